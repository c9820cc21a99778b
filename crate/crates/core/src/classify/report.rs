use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::{CriterionResult, Quantity, SeriesType, SliceDirection};
use crate::measures::MeasureClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Type2SingMarg,
    Type3LebMarg,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Type2SingMarg => "Type2_SingMarg",
            Verdict::Type3LebMarg => "Type3_LebMarg",
            Verdict::Inconclusive => "Inconclusive",
        }
    }

    pub fn series(self) -> Option<SeriesType> {
        match self {
            Verdict::Type2SingMarg => Some(SeriesType::SingMarg),
            Verdict::Type3LebMarg => Some(SeriesType::LebMarg),
            Verdict::Inconclusive => None,
        }
    }

    fn headline(self) -> &'static str {
        match self {
            Verdict::Type2SingMarg => "Type (2): f(x,y) = sum_{n>=0} sum_{m>=0} d_nm e^{2 pi i (nx + my)}",
            Verdict::Type3LebMarg => "Type (3): f(x,y) = sum_{n>=0} sum_{m in Z} d_nm e^{2 pi i (nx + my)}",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

/// Verdict plus the full criterion trace.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub marginal_x: MeasureClass,
    pub marginal_y: MeasureClass,
    pub weights_x: Vec<String>,
    pub weights_y: Vec<String>,
    pub mu_singular: bool,
    pub verdict: Verdict,
    pub slice_direction: SliceDirection,
    pub trace: Vec<CriterionResult>,
    pub notes: Vec<String>,
}

impl AdmissibilityReport {
    /// Satisfied criteria implying `ty`.
    pub fn witnesses(&self, ty: SeriesType) -> impl Iterator<Item = &CriterionResult> {
        self.trace.iter().filter(move |r| r.satisfied && r.implies == Some(ty))
    }

    /// Union of the directions of the satisfied criteria implying `ty`.
    pub fn directions(&self, ty: SeriesType) -> SliceDirection {
        self.witnesses(ty).fold(SliceDirection::None, |d, r| d.union(r.direction))
    }

    pub fn to_json(&self) -> Value {
        let marginal = |class: &MeasureClass, weights: &[String]| {
            json!({ "tag": class.tag, "reason": class.reason, "weights": weights })
        };
        let trace: Vec<Value> = self
            .trace
            .iter()
            .map(|r| {
                let quantities: Map<String, Value> = r
                    .quantities
                    .iter()
                    .map(|(k, v)| {
                        let v = match v {
                            Quantity::Rational(s) => Value::String(s.clone()),
                            Quantity::Real(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
                            Quantity::Integer(n) => Value::from(*n),
                        };
                        (k.clone(), v)
                    })
                    .collect();
                json!({
                    "name": r.name.label(),
                    "axis": r.axis.map(|a| a.name()),
                    "applicable": r.applicable,
                    "satisfied": r.satisfied,
                    "borderline": r.borderline,
                    "implies": r.implies.map(SeriesType::label),
                    "direction": r.direction.label(),
                    "quantities": quantities,
                    "note": r.note,
                })
            })
            .collect();
        json!({
            "verdict": self.verdict.label(),
            "sliceDirection": self.slice_direction.label(),
            "muSingular": self.mu_singular,
            "marginals": {
                "x": marginal(&self.marginal_x, &self.weights_x),
                "y": marginal(&self.marginal_y, &self.weights_y),
            },
            "trace": trace,
            "notes": self.notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {}", self.verdict.headline());
        let _ = writeln!(out, "slice direction: {}", self.slice_direction.label());
        let _ = writeln!(out, "x-marginal: {} weights ({})", self.marginal_x, self.weights_x.join(", "));
        let _ = writeln!(out, "y-marginal: {} weights ({})", self.marginal_y, self.weights_y.join(", "));
        let _ = writeln!(out, "measure singular: {}", self.mu_singular);
        let _ = writeln!(out, "trace:");
        for r in &self.trace {
            let status = match (r.applicable, r.satisfied, r.borderline) {
                (false, _, _) => "n/a",
                (true, true, _) => "satisfied",
                (true, false, true) => "borderline",
                (true, false, false) => "not satisfied",
            };
            let _ = write!(out, "  {:<13} {:<13}", r.label(), status);
            if r.satisfied {
                if let Some(ty) = r.implies {
                    let _ = write!(out, " -> {} ({})", ty.label(), r.direction.label());
                }
            }
            let q: Vec<String> = r.quantities.iter().map(|(k, v)| format!("{k}={v}")).collect();
            if !q.is_empty() {
                let _ = write!(out, "  [{}]", q.join(", "));
            }
            if let Some(note) = &r.note {
                let _ = write!(out, "  {note}");
            }
            out.push('\n');
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}
