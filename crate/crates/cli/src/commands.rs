use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context};
use num_complex::Complex;
use serde_json::{json, Value};

use ifs_fourier::grid_ifs::{attractor_dimension, grid_stats, render_raster, sample_points, DEFAULT_DEPTH};
use ifs_fourier::kaczmarz::{expand_1d, expand_2d, frame_diagnostics, sample_1d, sample_2d, GramSource};
use ifs_fourier::measures::{
    classify_marginal, discretize_grid, discretize_marginal, frostman_bound, kakutani_product_curve, project_marginal,
    slice_measure, verify_frostman,
};
use ifs_fourier::{
    classify_grid, Axis, Budget, CoefficientRule, DigitStream, Expand2dOptions, FrameReport, Grid, Marginal, MomentTable,
    SeriesChoice, Series1, Series2,
};

use crate::output::emit;
use crate::{AxisArg, CheckFailed, Command, Format, Knobs, RuleArg, SeriesArg};

const DEFAULT_EPS: f64 = 1e-10;
const DIAGNOSE_TOLERANCE: f64 = 1e-6;

type Job = fn(&Grid, &Knobs) -> anyhow::Result<Vec<u8>>;

pub fn run(command: &Command, knobs: &Knobs) -> anyhow::Result<()> {
    let (spec_path, job): (&Path, Job) = match command {
        Command::Validate { spec } => (spec, validate),
        Command::Stats { spec } => (spec, stats),
        Command::Dim { spec } => (spec, dim),
        Command::Classify { spec } => (spec, classify),
        Command::Kakutani { spec } => (spec, kakutani),
        Command::Frostman { spec } => (spec, frostman),
        Command::Moments { spec } => (spec, moments),
        Command::Render { spec } => (spec, render),
        Command::Sample { spec } => (spec, sample),
        Command::Expand1d { spec } => (spec, expand1d),
        Command::Expand2d { spec } => (spec, expand2d),
        Command::Diagnose { spec } => (spec, diagnose),
    };
    let text = std::fs::read_to_string(spec_path).with_context(|| format!("cannot read {}", spec_path.display()))?;
    let spec = Grid::parse(&text).with_context(|| format!("invalid spec {}", spec_path.display()))?;
    match job(&spec, knobs) {
        Ok(bytes) => emit(knobs.out.as_deref(), &bytes),
        Err(err) => {
            // a failed check still leaves its report behind
            if let Some(CheckFailed(report)) = err.downcast_ref::<CheckFailed>() {
                emit(knobs.out.as_deref(), report.as_bytes())?;
                bail!(CheckFailed("frame diagnostics".into()));
            }
            Err(err)
        }
    }
}

fn format(knobs: &Knobs, allowed: &[Format]) -> anyhow::Result<Format> {
    let f = knobs.format.unwrap_or(allowed[0]);
    if !allowed.contains(&f) {
        bail!(ifs_fourier::Error::Invalid(format!("format {f:?} is not available here")));
    }
    Ok(f)
}

fn json_bytes(value: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s.into_bytes()
}

fn axis(knobs: &Knobs) -> Axis {
    match knobs.axis {
        Some(AxisArg::Y) => Axis::Y,
        _ => Axis::X,
    }
}

fn frequencies(knobs: &Knobs, default: &[i64]) -> anyhow::Result<Vec<i64>> {
    let Some(text) = &knobs.freq else { return Ok(default.to_vec()) };
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| ifs_fourier::Error::Syntax(format!("--freq {text:?} is not a comma-separated list of integers")))?;
    if values.len() != default.len() {
        bail!(ifs_fourier::Error::Invalid(format!("--freq takes {} value(s), got {}", default.len(), values.len())));
    }
    Ok(values)
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn validate(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    Ok(match format(knobs, &[Format::Text, Format::Json])? {
        Format::Json => json_bytes(&json!({
            "valid": true, "rows": spec.rows(), "cols": spec.cols(), "cells": spec.cell_count(),
        })),
        _ => format!("ok: {}x{} grid, {} kept cells\n", spec.rows(), spec.cols(), spec.cell_count()).into_bytes(),
    })
}

fn stats(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let s = grid_stats(spec);
    Ok(match format(knobs, &[Format::Text, Format::Json])? {
        Format::Json => json_bytes(&json!({
            "rows": spec.rows(),
            "cols": spec.cols(),
            "cells": s.cells,
            "rowCounts": s.row_counts,
            "colCounts": s.col_counts,
            "colWeights": strings(&s.col_weights),
            "rowWeights": strings(&s.row_weights),
            "gamma1": s.gamma1.to_string(),
            "gamma2": s.gamma2.to_string(),
            "betaMax": s.beta_max.to_string(),
            "b": s.b,
            "bCols": s.b_cols,
            "xi1": s.xi1,
            "xi2": s.xi2,
        })),
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "grid {}x{} (rows x cols), {} kept cells", spec.rows(), spec.cols(), s.cells);
            let _ = writeln!(out, "row counts (bottom first) {:?}", s.row_counts);
            let _ = writeln!(out, "column counts {:?}", s.col_counts);
            let _ = writeln!(out, "x-marginal weights {}", strings(&s.col_weights).join(" "));
            let _ = writeln!(out, "y-marginal weights {}", strings(&s.row_weights).join(" "));
            let _ = writeln!(out, "gamma1 {}  gamma2 {}  beta_max {}", s.gamma1, s.gamma2, s.beta_max);
            let _ = writeln!(out, "b {}  b_cols {}", s.b, s.b_cols);
            let show = |v: Option<f64>| v.map_or("undefined".to_string(), |x| x.to_string());
            let _ = writeln!(out, "xi1 {}  xi2 {}", show(s.xi1), show(s.xi2));
            out.into_bytes()
        }
    })
}

fn dim(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let d: f64 = attractor_dimension(spec);
    Ok(match format(knobs, &[Format::Text, Format::Json])? {
        Format::Json => json_bytes(&json!({ "dimension": d })),
        _ => format!("{d}\n").into_bytes(),
    })
}

fn classify(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let report = classify_grid(spec);
    Ok(match format(knobs, &[Format::Text, Format::Json])? {
        Format::Json => json_bytes(&report.to_json()),
        _ => report.to_text().into_bytes(),
    })
}

fn kakutani(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let axis = axis(knobs);
    let marg = project_marginal(spec, axis);
    let reference = Marginal::uniform(marg.base())?;
    let terms = knobs.iters.unwrap_or(1000).max(1);
    let curve: Vec<f64> = kakutani_product_curve(&marg, &reference, terms)?;
    let (rho, last) = (curve[0], curve[terms - 1]);
    Ok(match format(knobs, &[Format::Text, Format::Json, Format::Csv])? {
        Format::Json => json_bytes(&json!({
            "axis": axis.name(), "affinity": rho, "terms": terms, "product": last, "curve": curve,
        })),
        Format::Csv => {
            let mut out = String::from("term,product\n");
            for (k, v) in curve.iter().enumerate() {
                let _ = writeln!(out, "{},{v}", k + 1);
            }
            out.into_bytes()
        }
        _ => format!(
            "{}-marginal against Lebesgue (base {})\naffinity {rho}\nproduct of {terms} terms {last}\n",
            axis.name(),
            marg.base()
        )
        .into_bytes(),
    })
}

fn frostman(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let axis = axis(knobs);
    let marg = project_marginal(spec, axis);
    let bound = frostman_bound(&marg);
    let report = verify_frostman(&marg, bound, knobs.trials.unwrap_or(10_000), knobs.depth.unwrap_or(10), knobs.seed);
    Ok(match format(knobs, &[Format::Text, Format::Json])? {
        Format::Json => json_bytes(&json!({
            "axis": axis.name(), "bound": bound, "report": report, "passed": report.passed(),
        })),
        _ => format!(
            "{}-marginal: mu(I) <= {} |I|^{}{}\n{} trials, {} violations, worst ratio {}\n",
            axis.name(),
            bound.c,
            bound.alpha,
            if bound.atomic { " (atomic)" } else { "" },
            report.trials,
            report.violations,
            report.worst_ratio
        )
        .into_bytes(),
    })
}

fn moments(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let bound = frequencies(knobs, &[8])?[0].abs();
    let eps = knobs.eps.unwrap_or(DEFAULT_EPS);
    let table: MomentTable<f64> = if let Some(descriptor) = &knobs.slice {
        let stream = DigitStream::parse(descriptor, spec.rows())?;
        MomentTable::slice(&slice_measure(spec, &stream)?, -bound..=bound, eps)?
    } else if knobs.axis.is_some() {
        MomentTable::marginal(&project_marginal(spec, axis(knobs)), -bound..=bound, eps)?
    } else {
        MomentTable::grid(spec, -bound..=bound, -bound..=bound, eps)?
    };
    Ok(match format(knobs, &[Format::Csv, Format::Json, Format::Text])? {
        Format::Json => {
            let entries: Vec<Value> = table
                .entries
                .iter()
                .map(|(&(k, l), v)| {
                    let mut e = json!({ "k": k, "re": v.value.re, "im": v.value.im, "errorBound": v.error_bound });
                    if table.two_dimensional {
                        e["l"] = json!(l);
                    }
                    e
                })
                .collect();
            json_bytes(&json!({ "measure": table.descriptor, "eps": eps, "entries": entries }))
        }
        Format::Text => format!("# {}\n{}", table.descriptor, table.to_csv()).into_bytes(),
        _ => table.to_csv().into_bytes(),
    })
}

fn render(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let raster = render_raster(spec, knobs.iters.unwrap_or(6), &Budget::default())?;
    Ok(match format(knobs, &[Format::Pgm, Format::Text])? {
        Format::Text => raster.to_pgm_plain(),
        _ => raster.to_pgm_binary(),
    })
}

fn sample(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let count = knobs.trials.unwrap_or(1000);
    let budget = Budget::default();
    if count > budget.max_atoms {
        bail!(ifs_fourier::Error::Budget(format!("{count} samples exceed {}", budget.max_atoms)));
    }
    let points: Vec<(f64, f64)> = sample_points(spec, count, knobs.depth.unwrap_or(DEFAULT_DEPTH), knobs.seed);
    Ok(match format(knobs, &[Format::Csv, Format::Json])? {
        Format::Json => json_bytes(&json!({ "seed": knobs.seed, "points": points })),
        _ => {
            let mut out = String::from("x,y\n");
            for (x, y) in points {
                let _ = writeln!(out, "{x},{y}");
            }
            out.into_bytes()
        }
    })
}

fn complex_pairs<'a>(cs: impl IntoIterator<Item = &'a Complex<f64>>) -> Vec<[f64; 2]> {
    cs.into_iter().map(|c| [c.re, c.im]).collect()
}

fn run_1d(spec: &Grid, knobs: &Knobs, axis: Axis, k: i64) -> anyhow::Result<Series1> {
    let marg = project_marginal(spec, axis);
    let dm = discretize_marginal(&marg, knobs.depth.unwrap_or(8), &Budget::default())?;
    let f = sample_1d(&dm, |x: f64| cis(k as f64 * x));
    Ok(expand_1d(&dm, GramSource::Discrete, &f, knobs.n.unwrap_or(64))?)
}

fn cis(t: f64) -> Complex<f64> {
    let a = 2.0 * std::f64::consts::PI * (t - t.floor());
    Complex::new(a.cos(), a.sin())
}

fn expand1d(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let axis = axis(knobs);
    let k = frequencies(knobs, &[1])?[0];
    let e = run_1d(spec, knobs, axis, k)?;
    let fmt = format(knobs, &[Format::Text, Format::Json, Format::Csv])?;
    if fmt != Format::Text {
        eprintln!("{}", e.describe());
    }
    Ok(match fmt {
        Format::Json => json_bytes(&json!({
            "axis": axis.name(),
            "frequency": k,
            "order": e.describe(),
            "coefficients": complex_pairs(&e.coefficients),
            "residual": e.residual_curve,
        })),
        Format::Csv => e.coefficients_csv().into_bytes(),
        _ => format!(
            "{}\nf = exp(2 pi i {k} x) on the {}-marginal\n||f|| {}\nfinal residual {}\nenergy {}\n",
            e.describe(),
            axis.name(),
            e.norm_f,
            e.final_residual(),
            e.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>()
        )
        .into_bytes(),
    })
}

fn options(knobs: &Knobs) -> Expand2dOptions {
    Expand2dOptions {
        series: match knobs.series {
            SeriesArg::Auto => SeriesChoice::Auto,
            SeriesArg::Sing => SeriesChoice::SingMarg,
            SeriesArg::Leb => SeriesChoice::LebMarg,
        },
        rule: match knobs.rule {
            RuleArg::Auxiliary => CoefficientRule::Auxiliary,
            RuleArg::Residual => CoefficientRule::ResidualCorrected,
        },
        budget: Budget::default(),
    }
}

fn run_2d(spec: &Grid, knobs: &Knobs, k: i64, l: i64) -> anyhow::Result<Series2> {
    let depth = knobs.depth.unwrap_or(3);
    let report = classify_grid(spec);
    let dm = discretize_grid(spec, depth, &Budget::default())?;
    let f = sample_2d(&dm, |x: f64, y: f64| cis(k as f64 * x + l as f64 * y));
    Ok(expand_2d(spec, &report, &f, knobs.n.unwrap_or(32), knobs.m.unwrap_or(32), depth, &options(knobs))?)
}

fn expand2d(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let kl = frequencies(knobs, &[1, 1])?;
    let e = run_2d(spec, knobs, kl[0], kl[1])?;
    let fmt = format(knobs, &[Format::Text, Format::Json, Format::Csv])?;
    if fmt != Format::Text {
        eprintln!("{}", e.describe());
    }
    Ok(match fmt {
        Format::Json => json_bytes(&json!({
            "frequency": kl,
            "order": e.describe(),
            "outer": e.outer,
            "inner": e.inner,
            "coefficients": e.coefficients.iter().map(complex_pairs).collect::<Vec<_>>(),
            "residual": e.residual_curve,
        })),
        Format::Csv => e.coefficients_csv().into_bytes(),
        _ => format!(
            "{}\nf = exp(2 pi i ({} x + {} y))\n||f|| {}\nfinal residual {}\nenergy {}\n",
            e.describe(),
            kl[0],
            kl[1],
            e.norm_f,
            e.final_residual(),
            e.energy()
        )
        .into_bytes(),
    })
}

fn diagnose(spec: &Grid, knobs: &Knobs) -> anyhow::Result<Vec<u8>> {
    let tolerance = knobs.eps.unwrap_or(DIAGNOSE_TOLERANCE);
    if tolerance.is_nan() || tolerance < 0.0 {
        bail!(ifs_fourier::Error::Invalid(format!("tolerance must be nonnegative, got {tolerance}")));
    }
    let kl = frequencies(knobs, &[1, 1])?;
    let mut sections: Vec<(String, FrameReport, bool)> = Vec::new();
    for (axis, k) in [(Axis::X, kl[0]), (Axis::Y, kl[1])] {
        let class = classify_marginal(&project_marginal(spec, axis));
        let e = run_1d(spec, knobs, axis, k)?;
        let r = frame_diagnostics(&e, tolerance);
        let ok = r.passed() && r.residual_monotone;
        sections.push((format!("1D {}-marginal ({:?}), {}", axis.name(), class.tag, e.describe()), r, ok));
    }
    let mut skipped = None;
    match run_2d(spec, knobs, kl[0], kl[1]) {
        Ok(e) => {
            let r = frame_diagnostics(&e, tolerance);
            // only the residual rule promises a nonincreasing curve
            let ok = r.passed() && (e.rule != CoefficientRule::ResidualCorrected || r.residual_monotone);
            sections.push((format!("2D, {}", e.describe()), r, ok));
        }
        Err(err) => match err.downcast_ref::<ifs_fourier::Error>() {
            Some(ifs_fourier::Error::NotAdmissible(why)) => skipped = Some(why.clone()),
            _ => return Err(err),
        },
    }
    let passed = sections.iter().all(|s| s.2);
    let bytes = match format(knobs, &[Format::Text, Format::Json])? {
        Format::Json => json_bytes(&json!({
            "passed": passed,
            "tolerance": tolerance,
            "sections": sections.iter().map(|(name, r, ok)| json!({
                "name": name,
                "passed": ok,
                "energy": r.energy,
                "normSq": r.norm_sq,
                "lower": r.lower,
                "upper": r.upper,
                "identityGap": r.identity_gap,
                "residualMaxIncrease": r.residual_max_increase,
            })).collect::<Vec<_>>(),
            "skipped2d": skipped,
        })),
        _ => {
            let mut out = String::new();
            for (name, r, ok) in &sections {
                let _ = writeln!(out, "== {name}\n{}{}\n", r.to_text(), if *ok { "PASS" } else { "FAIL" });
            }
            if let Some(why) = &skipped {
                let _ = writeln!(out, "== 2D skipped: {why}\n");
            }
            let _ = writeln!(out, "overall {}", if passed { "PASS" } else { "FAIL" });
            out.into_bytes()
        }
    };
    if passed {
        Ok(bytes)
    } else {
        Err(CheckFailed(String::from_utf8(bytes).expect("utf-8 report")).into())
    }
}
