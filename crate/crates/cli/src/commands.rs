use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use carlitz_core::gkdim::Classification;
use carlitz_core::verify;
use carlitz_core::{
    compose_diagonal, gk_dimension, irreducibles, CarlitzCache, Fq, LinFun, Place, RankMode, TruncatedSeries,
    Valuation, VandermondeForm, VerifyReport,
};

use crate::args::*;
use crate::output::Output;

pub const EXIT_UNSTABLE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

pub fn compute(field: &Fq, a: &ComputeArgs) -> Result<Output> {
    let cache = CarlitzCache::new(field);
    let q = field.q();
    let (label, args, value_json, text) = match a.what {
        ComputeWhat::Factorial | ComputeWhat::Lfac | ComputeWhat::Bracket => {
            let (label, v) = match a.what {
                ComputeWhat::Factorial => ("factorial", cache.dfac(a.i)),
                ComputeWhat::Lfac => ("lfac", cache.lfac(a.i)),
                _ => ("bracket", cache.bracket(a.i)),
            };
            (label, json!({ "i": a.i }), serde_json::to_value(v.to_json())?, v.to_string())
        }
        ComputeWhat::BinomK => {
            let v = cache.binom_k(a.k as i64, a.m as i64);
            ("binomK", json!({ "k": a.k, "m": a.m }), serde_json::to_value(v.to_json())?, v.to_string())
        }
        ComputeWhat::Carlitz => {
            let (kind, v) = match a.kind {
                CarlitzKind::E => ("e", cache.carlitz_e(a.k)),
                CarlitzKind::F => ("f", cache.carlitz_f(a.k)),
            };
            ("carlitz", json!({ "k": a.k, "kind": kind }), serde_json::to_value(v.to_json())?, v.to_string())
        }
        ComputeWhat::Hyp => {
            let v = cache.thakur_hyp(&a.a, &a.b, a.t.unwrap_or(u32::MAX));
            ("hyp", json!({ "a": a.a, "b": a.b, "T": a.t }), serde_json::to_value(v.to_json())?, v.to_string())
        }
    };
    let args_text = args.to_string();
    Ok(Output {
        json: json!({ "q": q, "what": label, "args": args, "value": value_json, "text": text }),
        text: format!("{text}\n"),
        csv_header: vec!["what", "q", "args", "value"],
        csv_rows: vec![vec![label.to_string(), q.to_string(), args_text, text]],
        exit: 0,
    })
}

pub fn verify(field: &Fq, a: &VerifyArgs, seed: u64) -> Result<Output> {
    let cache = CarlitzCache::new(field);
    let reports: Vec<VerifyReport> = match a.which {
        VerifyWhich::Pascal => vec![verify::pascal(&cache, a.kmax.unwrap_or(8), a.perturb)],
        VerifyWhich::Vandermonde => {
            let form = match a.form {
                FormArg::Literal => VandermondeForm::Literal,
                FormArg::Twisted => VandermondeForm::Twisted,
            };
            vec![verify::vandermonde(&cache, a.kmax.unwrap_or(6), form, a.perturb)]
        }
        VerifyWhich::Kbinom => vec![verify::kbinom(
            &cache,
            a.kmax.unwrap_or(5),
            a.samples.unwrap_or(20),
            a.deg as u64,
            seed,
            a.perturb,
        )],
        VerifyWhich::Pde => {
            if a.t < 2 {
                bail!("--T must be at least 2");
            }
            vec![verify::pde(&cache, a.t, a.perturb)]
        }
        VerifyWhich::Contiguous => {
            vec![verify::contiguous(&cache, a.pmax, &[(1, 0), (0, 1), (1, 1)], a.perturb)]
        }
        VerifyWhich::Places => vec![verify::places(&cache, a.kmax.unwrap_or(8), a.dmax, a.perturb)],
        VerifyWhich::Ring => {
            let samples = a.samples.unwrap_or(200);
            vec![
                verify::ring(field, a.n, samples, a.deg, seed, a.perturb),
                verify::faithfulness(field, a.n, samples.min(100), a.deg, seed),
            ]
        }
    };
    let passed = reports.iter().all(VerifyReport::passed);
    let mut text = String::new();
    for r in &reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        text.push_str(&format!("{verdict} {} q={} cases={} failures={}\n", r.check, r.q, r.cases, r.failure_count));
        for f in &r.failures {
            text.push_str(&format!("  {f}\n"));
        }
    }
    Ok(Output {
        json: json!({ "passed": passed, "reports": reports }),
        text,
        csv_header: vec!["check", "q", "cases", "failures", "passed"],
        csv_rows: reports
            .iter()
            .map(|r| {
                vec![r.check.clone(), r.q.to_string(), r.cases.to_string(), r.failure_count.to_string(), r.passed().to_string()]
            })
            .collect(),
        exit: if passed { 0 } else { EXIT_VERIFY_FAILED },
    })
}

/// `e<k>`, `f<k>`, or a polynomial in `s`.
fn parse_s_poly(cache: &CarlitzCache, spec: &str) -> Result<LinFun> {
    let spec = spec.trim();
    for (prefix, is_e) in [("e", true), ("f", false)] {
        if let Some(k) = spec.strip_prefix(prefix).and_then(|r| r.parse::<u32>().ok()) {
            return Ok(if is_e { cache.carlitz_e(k) } else { cache.carlitz_f(k) });
        }
    }
    LinFun::parse_in_s(cache.field(), spec).with_context(|| format!("cannot parse {spec:?}"))
}

pub fn gkdim(field: &Fq, a: &GkdimArgs, mode: RankMode) -> Result<Output> {
    let cache = CarlitzCache::new(field);
    let needs_window = !matches!(a.function, Function::Poly | Function::Diag);
    if needs_window && a.jmax + 2 > a.t {
        bail!("--jmax must be at most T - 2");
    }
    let series = match a.function {
        Function::Carlitz => cache.carlitz_module_trunc(a.t),
        Function::Binom => cache.genfun_binom(a.t),
        Function::Hyp => cache.genfun_hyp(a.l, a.lambda, a.t)?,
        Function::Sum => cache.carlitz_module_trunc(a.t).add(&cache.genfun_binom(a.t)),
        Function::Diag => compose_diagonal(&parse_s_poly(&cache, &a.g)?, a.t),
        Function::Poly => TruncatedSeries::exact(parse_s_poly(&cache, &a.spec)?),
    };
    if series.body.is_zero() {
        bail!("the function is zero");
    }
    if !needs_window && !series.is_exact() && a.jmax + 2 > a.t {
        bail!("--jmax must be at most T - 2");
    }
    let r = gk_dimension(&series, a.jmax, mode)?;
    let mut text = format!(
        "q={} n={} dims: {}\n",
        r.q,
        r.n,
        r.dim_values().iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
    );
    match (r.degree, r.multiplicity, r.window) {
        (Some(d), Some(m), Some((lo, hi))) => {
            text.push_str(&format!("degree {d} multiplicity {m} window [{lo}, {hi}]\n"))
        }
        _ => text.push_str("no Hilbert fit\n"),
    }
    let class = r.classification.unwrap_or(Classification::Unstable);
    text.push_str(&format!("classification {}\n", class.as_str()));
    for w in &r.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    Ok(Output {
        json: r.to_json(),
        text,
        csv_header: vec!["j", "dim"],
        csv_rows: r.dims.iter().map(|(j, d)| vec![j.to_string(), d.to_string()]).collect(),
        exit: if class == Classification::Unstable { EXIT_UNSTABLE } else { 0 },
    })
}

fn valuation_json(v: &Valuation) -> Value {
    match v.finite() {
        Some(e) if e.level() == 0 => json!(e.num()),
        _ => json!(v.to_string()),
    }
}

pub fn table(field: &Fq, a: &TableArgs) -> Result<Output> {
    let cache = CarlitzCache::new(field);
    match a.which {
        TableWhich::BinomK => {
            let places: Vec<Place> = (1..=a.dmax).flat_map(|d| irreducibles(field, d)).collect();
            let mut rows = Vec::new();
            let mut csv_rows = Vec::new();
            let mut text = String::new();
            for k in 0..=a.kmax {
                for m in 0..=k {
                    let (v, vals) = cache.binom_table_row(k, m, &places);
                    let text_v = v.to_string();
                    rows.push(json!({
                        "k": k,
                        "m": m,
                        "value": v.to_json(),
                        "valuations": vals.iter().map(|(p, x)| json!([p, valuation_json(x)])).collect::<Vec<_>>(),
                    }));
                    text.push_str(&format!("binomK({k},{m}) = {text_v}\n"));
                    for (p, x) in &vals {
                        text.push_str(&format!("  v[{p}] = {x}\n"));
                        csv_rows.push(vec![k.to_string(), m.to_string(), text_v.clone(), p.clone(), x.to_string()]);
                    }
                    if vals.is_empty() {
                        csv_rows.push(vec![k.to_string(), m.to_string(), text_v.clone(), String::new(), String::new()]);
                    }
                }
            }
            Ok(Output {
                json: Value::Array(rows),
                text,
                csv_header: vec!["k", "m", "value", "place", "valuation"],
                csv_rows,
                exit: 0,
            })
        }
        TableWhich::Factorial => {
            let x = Place::x(field);
            let mut rows = Vec::new();
            let mut csv_rows = Vec::new();
            let mut text = String::new();
            for i in 0..=a.kmax {
                let (d, l) = (cache.dfac(i), cache.lfac(i));
                let (vd, vl) = (x.valuation(&d), x.valuation(&l));
                rows.push(json!({
                    "i": i,
                    "dfac": d.to_json(),
                    "lfac": l.to_json(),
                    "v_x_dfac": valuation_json(&vd),
                    "v_x_lfac": valuation_json(&vl),
                }));
                text.push_str(&format!("D_{i} = {d}\nL_{i} = {l}\n  v_x(D_{i}) = {vd}, v_x(L_{i}) = {vl}\n"));
                csv_rows.push(vec![i.to_string(), d.to_string(), l.to_string(), vd.to_string(), vl.to_string()]);
            }
            Ok(Output {
                json: Value::Array(rows),
                text,
                csv_header: vec!["i", "dfac", "lfac", "v_x_dfac", "v_x_lfac"],
                csv_rows,
                exit: 0,
            })
        }
    }
}
