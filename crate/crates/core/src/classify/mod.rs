//! Decides which double Fourier series `L^2(mu)` admits.
//!
//! Every criterion is a sufficient condition. Rational comparisons are exact;
//! comparisons involving logarithms are done in `f64` and a result within
//! [`BORDERLINE`] of its threshold is reported as not satisfied.

mod report;

use serde::Serialize;

use crate::grid_ifs::{attractor_dimension, grid_stats, Axis, GridSpec};
use crate::measures::{classify_marginal, frostman_bound, project_marginal, MeasureClass};
use crate::scalar::Exact;

pub use report::{AdmissibilityReport, Verdict};

/// Width of the band in which a float comparison is refused.
pub const BORDERLINE: f64 = 1e-12;

/// Series type (2): nonnegative inner index; type (3): bi-infinite inner index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SeriesType {
    #[serde(rename = "Type2_SingMarg")]
    SingMarg,
    #[serde(rename = "Type3_LebMarg")]
    LebMarg,
}

impl SeriesType {
    pub fn label(self) -> &'static str {
        match self {
            SeriesType::SingMarg => "Type2_SingMarg",
            SeriesType::LebMarg => "Type3_LebMarg",
        }
    }
}

/// Which slice family is singular.
///
/// `XSlices` refers to the vertical fibers `rho_x` over the x-marginal,
/// `YSlices` to the horizontal fibers `rho^y` over the y-marginal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SliceDirection {
    XSlices,
    YSlices,
    Both,
    None,
}

impl SliceDirection {
    pub fn union(self, other: SliceDirection) -> SliceDirection {
        use SliceDirection::*;
        match (self, other) {
            (None, d) | (d, None) => d,
            (XSlices, XSlices) => XSlices,
            (YSlices, YSlices) => YSlices,
            _ => Both,
        }
    }

    pub fn includes(self, axis: Axis) -> bool {
        matches!(
            (self, axis),
            (SliceDirection::Both, _) | (SliceDirection::XSlices, Axis::X) | (SliceDirection::YSlices, Axis::Y)
        )
    }

    pub fn of_axis(axis: Axis) -> SliceDirection {
        match axis {
            Axis::X => SliceDirection::XSlices,
            Axis::Y => SliceDirection::YSlices,
        }
    }

    pub fn swapped(self) -> SliceDirection {
        match self {
            SliceDirection::XSlices => SliceDirection::YSlices,
            SliceDirection::YSlices => SliceDirection::XSlices,
            d => d,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SliceDirection::XSlices => "xSlices",
            SliceDirection::YSlices => "ySlices",
            SliceDirection::Both => "both",
            SliceDirection::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[allow(non_camel_case_types)]
pub enum Criterion {
    CorCollect1,
    CorCollect2,
    CorCollect3,
    FullGrid_x,
    FullGrid_y,
    CorA_col,
    CorA_row,
    SquareCarpet,
    ThmA,
}

impl Criterion {
    pub fn label(self) -> &'static str {
        match self {
            Criterion::CorCollect1 => "CorCollect1",
            Criterion::CorCollect2 => "CorCollect2",
            Criterion::CorCollect3 => "CorCollect3",
            Criterion::FullGrid_x => "FullGrid_x",
            Criterion::FullGrid_y => "FullGrid_y",
            Criterion::CorA_col => "CorA_col",
            Criterion::CorA_row => "CorA_row",
            Criterion::SquareCarpet => "SquareCarpet",
            Criterion::ThmA => "ThmA",
        }
    }
}

/// A value recorded in the trace.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Rational(String),
    Real(f64),
    Integer(i64),
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Rational(s) => f.write_str(s),
            Quantity::Real(x) => write!(f, "{x}"),
            Quantity::Integer(n) => write!(f, "{n}"),
        }
    }
}

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub name: Criterion,
    pub axis: Option<Axis>,
    pub applicable: bool,
    pub satisfied: bool,
    pub borderline: bool,
    /// The series type the criterion yields when satisfied.
    pub implies: Option<SeriesType>,
    pub direction: SliceDirection,
    pub quantities: Vec<(String, Quantity)>,
    pub note: Option<String>,
}

impl CriterionResult {
    fn new(name: Criterion, axis: Option<Axis>) -> Self {
        Self {
            name,
            axis,
            applicable: false,
            satisfied: false,
            borderline: false,
            implies: None,
            direction: SliceDirection::None,
            quantities: Vec::new(),
            note: None,
        }
    }

    fn inapplicable(name: Criterion, axis: Option<Axis>, note: impl Into<String>) -> Self {
        Self { note: Some(note.into()), ..Self::new(name, axis) }
    }

    fn rational<Q: Exact>(mut self, key: &str, value: &Q) -> Self {
        self.quantities.push((key.into(), Quantity::Rational(value.to_string())));
        self
    }

    fn real(mut self, key: &str, value: f64) -> Self {
        self.quantities.push((key.into(), Quantity::Real(value)));
        self
    }

    fn integer(mut self, key: &str, value: usize) -> Self {
        self.quantities.push((key.into(), Quantity::Integer(value as i64)));
        self
    }

    pub fn quantity(&self, key: &str) -> Option<&Quantity> {
        self.quantities.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Label including the axis, e.g. `ThmA(x)`.
    pub fn label(&self) -> String {
        match (self.name, self.axis) {
            (Criterion::ThmA, Some(axis)) => format!("ThmA({})", axis.name()),
            (name, _) => name.label().to_string(),
        }
    }
}

/// Exact `lhs < rhs` for the float criteria: `(satisfied, borderline)`.
fn strictly_below(lhs: f64, rhs: f64) -> (bool, bool) {
    let borderline = (lhs - rhs).abs() <= BORDERLINE;
    (lhs < rhs && !borderline, borderline)
}

/// Type implied by a slice criterion whose marginal has the given class.
fn implied_by(class: MeasureClass) -> Option<SeriesType> {
    if class.is_singular() {
        Some(SeriesType::SingMarg)
    } else if class.is_lebesgue() {
        Some(SeriesType::LebMarg)
    } else {
        None
    }
}

/// The three items of the marginal-class criterion.
pub fn check_cor_collect(class_x: MeasureClass, class_y: MeasureClass, mu_singular: bool) -> [CriterionResult; 3] {
    use Criterion::*;
    if class_x.is_atomic() || class_y.is_atomic() {
        let note = "atomic marginal: excluded from the Fourier machinery";
        return [
            CriterionResult::inapplicable(CorCollect1, None, note),
            CriterionResult::inapplicable(CorCollect2, None, note),
            CriterionResult::inapplicable(CorCollect3, None, note),
        ];
    }
    let mut one = CriterionResult::new(CorCollect1, None);
    one.applicable = true;
    one.implies = Some(SeriesType::SingMarg);
    one.satisfied = class_x.is_singular() && class_y.is_singular();
    if one.satisfied {
        one.direction = SliceDirection::Both;
    }

    let mut two = CriterionResult::new(CorCollect2, None);
    two.applicable = true;
    two.implies = Some(SeriesType::LebMarg);
    // the singular marginal makes the fibers over the Lebesgue one singular
    if class_x.is_singular() && class_y.is_lebesgue() {
        two.satisfied = true;
        two.direction = SliceDirection::YSlices;
    } else if class_x.is_lebesgue() && class_y.is_singular() {
        two.satisfied = true;
        two.direction = SliceDirection::XSlices;
    }

    let mut three = CriterionResult::new(CorCollect3, None);
    three.applicable = true;
    three.implies = Some(SeriesType::LebMarg);
    three.satisfied = class_x.is_lebesgue() && class_y.is_lebesgue() && mu_singular;
    if three.satisfied {
        three.direction = SliceDirection::Both;
    }
    if class_x.is_lebesgue() && class_y.is_lebesgue() && !mu_singular {
        three.note = Some("measure not singular".into());
    }
    [one, two, three]
}

/// Frostman route: singular marginal with `dim K < alpha + 1` gives singular fibers over that axis.
pub fn check_thm_a<Q: Exact>(spec: &GridSpec<Q>, axis: Axis) -> CriterionResult {
    let marg = project_marginal(spec, axis);
    let class = classify_marginal(&marg);
    if !class.is_singular() {
        return CriterionResult::inapplicable(
            Criterion::ThmA,
            Some(axis),
            format!("{}-marginal is {:?}, not singular", axis.name(), class.tag),
        );
    }
    let bound = frostman_bound(&marg);
    let dim: f64 = attractor_dimension(spec);
    let threshold = bound.alpha + 1.0;
    let (satisfied, borderline) = strictly_below(dim, threshold);
    let mut r = CriterionResult::new(Criterion::ThmA, Some(axis))
        .rational("gamma", &marg.max_weight())
        .real("alpha", bound.alpha)
        .real("C", bound.c)
        .real("dimH", dim)
        .real("threshold", threshold);
    r.applicable = true;
    r.satisfied = satisfied;
    r.borderline = borderline;
    r.implies = Some(SeriesType::SingMarg);
    if satisfied {
        r.direction = SliceDirection::of_axis(axis);
    }
    if borderline {
        r.note = Some("dimension equals alpha + 1 within 1e-12; strict inequality not established".into());
    }
    r
}

/// The gamma / xi criteria, column direction then row direction.
pub fn check_cor_a<Q: Exact>(spec: &GridSpec<Q>) -> (CriterionResult, CriterionResult) {
    let (m, n) = (spec.rows(), spec.cols());
    if m < 2 || n < 2 {
        let note = format!("needs at least 2 rows and 2 columns (grid is {m}x{n})");
        return (
            CriterionResult::inapplicable(Criterion::CorA_col, None, note.clone()),
            CriterionResult::inapplicable(Criterion::CorA_row, None, note),
        );
    }
    if spec.is_full() {
        let note = "full grid: the condition reduces to gamma < 1/base, impossible for weights summing to 1";
        return (
            CriterionResult::inapplicable(Criterion::CorA_col, None, note),
            CriterionResult::inapplicable(Criterion::CorA_row, None, note),
        );
    }
    let stats = grid_stats(spec);
    let xi1 = stats.xi1.expect("grid is at least 2x2");
    let xi2 = stats.xi2.expect("grid is at least 2x2");
    let col = cor_a_direction(spec, Criterion::CorA_col, Axis::X, &stats.gamma1, n, xi1, stats.cells);
    let row = cor_a_direction(spec, Criterion::CorA_row, Axis::Y, &stats.gamma2, m, xi2, stats.cells);
    (col, row)
}

fn cor_a_direction<Q: Exact>(
    spec: &GridSpec<Q>,
    name: Criterion,
    axis: Axis,
    gamma: &Q,
    base: usize,
    xi: f64,
    cells: usize,
) -> CriterionResult {
    let class = classify_marginal(&project_marginal(spec, axis));
    let Some(implies) = implied_by(class) else {
        return CriterionResult::inapplicable(name, None, format!("{}-marginal is atomic", axis.name()));
    };
    let mut r = CriterionResult::new(name, None).rational("gamma", gamma).real("xi", xi);
    r.applicable = true;
    r.implies = Some(implies);
    if spec.rows() == spec.cols() {
        // xi is the cell count here, so the threshold is the rational base / N
        let threshold = Q::from_usize(base) / Q::from_usize(cells);
        r.satisfied = *gamma < threshold;
        r = r.rational("threshold", &threshold);
    } else {
        let threshold = base as f64 / xi;
        let (satisfied, borderline) = strictly_below(gamma.to_real::<f64>(), threshold);
        r.satisfied = satisfied;
        r.borderline = borderline;
        r = r.real("threshold", threshold);
        if borderline {
            r.note = Some("gamma equals base / xi within 1e-12".into());
        }
    }
    if r.satisfied {
        r.direction = SliceDirection::of_axis(axis);
    }
    r
}

/// Square grids: `gamma < m / N` with `gamma` the largest column total.
pub fn check_square_carpet<Q: Exact>(spec: &GridSpec<Q>) -> CriterionResult {
    let (m, n) = (spec.rows(), spec.cols());
    if m != n {
        return CriterionResult::inapplicable(Criterion::SquareCarpet, None, format!("grid is {m}x{n}, not square"));
    }
    let class = classify_marginal(&project_marginal(spec, Axis::X));
    let Some(implies) = implied_by(class) else {
        return CriterionResult::inapplicable(Criterion::SquareCarpet, None, "x-marginal is atomic");
    };
    let stats = grid_stats(spec);
    let threshold = Q::from_usize(m) / Q::from_usize(stats.cells);
    let mut r = CriterionResult::new(Criterion::SquareCarpet, None)
        .rational("gamma", &stats.gamma1)
        .integer("N", stats.cells)
        .rational("threshold", &threshold);
    r.applicable = true;
    r.implies = Some(implies);
    r.satisfied = stats.gamma1 < threshold;
    if r.satisfied {
        r.direction = SliceDirection::XSlices;
    }
    r
}

/// Full grids: `beta_max < 1/b` (or `b = 0`) on the rows (`y`) or columns (`x`).
pub fn check_fullgrid<Q: Exact>(spec: &GridSpec<Q>, axis: Axis) -> CriterionResult {
    let name = match axis {
        Axis::X => Criterion::FullGrid_x,
        Axis::Y => Criterion::FullGrid_y,
    };
    if !spec.is_full() {
        return CriterionResult::inapplicable(name, None, "grid is not full");
    }
    let class = classify_marginal(&project_marginal(spec, axis));
    if !class.is_singular() {
        return CriterionResult::inapplicable(
            name,
            None,
            format!("{}-marginal is {:?}, not singular", axis.name(), class.tag),
        );
    }
    let stats = grid_stats(spec);
    let (beta_max, b) = match axis {
        Axis::X => (stats.gamma1, stats.b_cols),
        Axis::Y => (stats.beta_max, stats.b),
    };
    let mut r = CriterionResult::new(name, None).rational("betaMax", &beta_max).integer("b", b);
    r.applicable = true;
    r.implies = Some(SeriesType::SingMarg);
    r.satisfied = if b == 0 {
        true
    } else {
        let threshold = Q::one() / Q::from_usize(b);
        r = r.rational("threshold", &threshold);
        beta_max < threshold
    };
    if r.satisfied {
        r.direction = SliceDirection::of_axis(axis);
    }
    r
}

/// Runs every criterion and combines them into a verdict.
pub fn classify_grid<Q: Exact>(spec: &GridSpec<Q>) -> AdmissibilityReport {
    let marg_x = project_marginal(spec, Axis::X);
    let marg_y = project_marginal(spec, Axis::Y);
    let class_x = classify_marginal(&marg_x);
    let class_y = classify_marginal(&marg_y);
    let mu_singular = !spec.is_lebesgue();

    let mut trace: Vec<CriterionResult> = check_cor_collect(class_x, class_y, mu_singular).into();
    trace.push(check_fullgrid(spec, Axis::X));
    trace.push(check_fullgrid(spec, Axis::Y));
    let (col, row) = check_cor_a(spec);
    trace.push(col);
    trace.push(row);
    trace.push(check_square_carpet(spec));
    trace.push(check_thm_a(spec, Axis::X));
    trace.push(check_thm_a(spec, Axis::Y));

    let mut notes = Vec::new();
    for r in trace.iter().filter(|r| r.borderline) {
        notes.push(format!("warning: {} is borderline and was not counted", r.label()));
    }

    let (verdict, slice_direction) = if class_x.is_atomic() || class_y.is_atomic() {
        notes.push("atomic marginal (a row or column carries all the weight): no verdict".into());
        (Verdict::Inconclusive, SliceDirection::None)
    } else if !mu_singular {
        notes.push("measure not singular: it is planar Lebesgue measure".into());
        (Verdict::Inconclusive, SliceDirection::None)
    } else {
        let witnesses = |ty: SeriesType| {
            trace
                .iter()
                .filter(move |r| r.satisfied && r.implies == Some(ty))
                .fold(SliceDirection::None, |d, r| d.union(r.direction))
        };
        let type2 = witnesses(SeriesType::SingMarg);
        let type3 = witnesses(SeriesType::LebMarg);
        if type2 != SliceDirection::None {
            (Verdict::Type2SingMarg, type2)
        } else if type3 != SliceDirection::None {
            (Verdict::Type3LebMarg, type3)
        } else {
            notes.push("no implemented sufficient condition holds".into());
            (Verdict::Inconclusive, SliceDirection::None)
        }
    };

    AdmissibilityReport {
        marginal_x: class_x,
        marginal_y: class_y,
        weights_x: marg_x.weights().iter().map(ToString::to_string).collect(),
        weights_y: marg_y.weights().iter().map(ToString::to_string).collect(),
        mu_singular,
        verdict,
        slice_direction,
        trace,
        notes,
    }
}
