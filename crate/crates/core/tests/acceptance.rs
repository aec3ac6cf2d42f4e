//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Known failures are listed in `DOCUMENTED_FAILURES`; they must still fail,
//! and every other criterion must pass within its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use carlitz_core::gkdim::{
    artin_schreier_residual, default_diagonal, gk_dimension, hilbert_fit, independence_rank_check, matrix_module_check,
    module_f_dims_enumerated, vacuum_eigencheck, Classification, MatrixModuleA1,
};
use carlitz_core::verify::{self, VandermondeForm};
use carlitz_core::{
    compose_diagonal, dim_gamma, CarlitzCache, Fq, LinFun, LinMonomial, PerfectRational, RankMode, TruncatedSeries,
};

const DOCUMENTED_FAILURES: &[(&str, &str)] = &[
    ("3b", "the literal Vandermonde recurrence is false from l = 2 on (first at q=2, k=3, m=2, l=2)"),
    ("7f", "polynomials of s-degree q^3 need j_max >= 6 before three equal differences appear"),
    ("7e", "the sum saturates the V - j window at T = 10 (levels 4 and 5), so no Hilbert fit exists"),
];

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn run(id: &'static str, title: &'static str, budget_secs: u64, body: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = body();
    Outcome { id, title, passed, detail, elapsed: start.elapsed(), budget: Duration::from_secs(budget_secs) }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn fields(ps: &[(u32, u32)]) -> Vec<Fq> {
    ps.iter().map(|&(p, nu)| Fq::new(p, nu).unwrap()).collect()
}

fn criterion_1() -> (bool, String) {
    let mut bad = Vec::new();
    for n in 0..=2usize {
        for nu in 0..=8u32 {
            let (enumerated, _) = dim_gamma(n, nu);
            let oracle = binomial(nu as u64 + n as u64 + 2, n as u64 + 2);
            if enumerated != oracle {
                bad.push(format!("n={n} nu={nu}: {enumerated} vs {oracle}"));
            }
        }
    }
    (bad.is_empty(), format!("27 cases, mismatches {bad:?}"))
}

fn criterion_2() -> (bool, String) {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 1..=2u32 {
        let seq: Vec<i64> = (0..=6u64).map(|j| module_f_dims_enumerated(n, j) as i64).collect();
        let closed: Vec<i64> = (0..=6i64).map(|j| (j + 1).pow(n) + (1..=j).map(|i| i.pow(n)).sum::<i64>()).collect();
        let fit = hilbert_fit(&seq);
        let factorial: i64 = (1..=n as i64).product();
        let good = seq == closed
            && matches!(&fit, Ok(f) if f.degree == n + 1 && f.multiplicity == factorial);
        ok &= good;
        notes.push(format!("n={n} dims {seq:?} fit {:?}", fit.map(|f| (f.degree, f.multiplicity))));
    }
    (ok, notes.join("; "))
}

fn criterion_3a() -> (bool, String) {
    let reps: Vec<_> = fields(&[(2, 1), (3, 1), (2, 2)])
        .iter()
        .map(|f| verify::pascal(&CarlitzCache::new(f), 8, false))
        .collect();
    let cases: usize = reps.iter().map(|r| r.cases).sum();
    (reps.iter().all(|r| r.passed()), format!("{cases} cases, q in {{2,3,4}}, 1 <= k <= 8"))
}

fn vandermonde(form: VandermondeForm) -> (bool, String) {
    let reps: Vec<_> = fields(&[(2, 1), (3, 1)])
        .iter()
        .map(|f| verify::vandermonde(&CarlitzCache::new(f), 6, form, false))
        .collect();
    let fails: usize = reps.iter().map(|r| r.failure_count).sum();
    let cases: usize = reps.iter().map(|r| r.cases).sum();
    let first = reps.iter().flat_map(|r| r.failures.first().map(|f| format!("q={} {f}", r.q))).next();
    (fails == 0, format!("{cases} cases, {fails} failures, first {first:?}"))
}

fn criterion_4() -> (bool, String) {
    let reps: Vec<_> = fields(&[(2, 1), (3, 1)])
        .iter()
        .map(|f| verify::kbinom(&CarlitzCache::new(f), 5, 20, 3, 2024, false))
        .collect();
    let cases: usize = reps.iter().map(|r| r.cases).sum();
    (reps.iter().all(|r| r.passed()), format!("{cases} cases"))
}

fn criterion_5() -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for f in fields(&[(2, 1), (3, 1)]) {
        let c = CarlitzCache::new(&f);
        let pde = verify::pde(&c, 8, false);
        let cont = verify::contiguous(&c, 4, &[(1, 0), (0, 1), (1, 1)], false);
        ok &= pde.passed() && cont.passed();
        notes.push(format!("q={}: pde/fixed-point {} cases, contiguity {} cases", f.q(), pde.cases, cont.cases));
    }
    (ok, notes.join("; "))
}

fn criterion_6() -> (bool, String) {
    let reps: Vec<_> = fields(&[(2, 1), (3, 1)])
        .iter()
        .map(|f| CarlitzCache::new(f).place_integrality_sweep(8, 3))
        .collect();
    let places: usize = reps.iter().map(|r| r.places).sum();
    let pairs: usize = reps.iter().map(|r| r.pairs_checked).sum();
    (reps.iter().all(|r| r.passed()), format!("{places} places, {pairs} (place, k, m) valuations"))
}

fn gk(series: TruncatedSeries, degree: u32, class: Classification) -> (bool, String) {
    match gk_dimension(&series, 5, RankMode::Exact) {
        Ok(r) => (
            r.degree == Some(degree) && r.classification == Some(class),
            format!("dims {:?} degree {:?} classification {:?}", r.dim_values(), r.degree, r.classification.map(|c| c.as_str())),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn criterion_8() -> (bool, String) {
    let mut notes = Vec::new();
    let mut ok = true;
    for (p, n, samples) in [(2, 0, 250), (2, 1, 250), (3, 0, 250), (3, 1, 250)] {
        let f = Fq::new(p, 1).unwrap();
        let r = verify::ring(&f, n, samples, 3, 8 + p as u64 + n as u64, false);
        ok &= r.passed();
        notes.push(format!("q={p} n={n}: {} ok", r.cases - r.failure_count));
    }
    for p in [2, 3] {
        let f = Fq::new(p, 1).unwrap();
        let r = verify::faithfulness(&f, 1, 50, 3, 99);
        ok &= r.passed();
        notes.push(format!("faithfulness q={p}: {}/{}", r.cases - r.failure_count, r.cases));
    }
    (ok, notes.join("; "))
}

fn criterion_9() -> (bool, String) {
    let mut ok = true;
    let mut checked = 0;
    for f in fields(&[(2, 1), (3, 1), (5, 1), (2, 2)]) {
        let diag = default_diagonal(&f);
        ok &= artin_schreier_residual(&diag).is_zero();
        let mut rng = ChaCha8Rng::seed_from_u64(f.q() as u64);
        for k in 1..=4 {
            for _ in 0..50 {
                let m = MatrixModuleA1::random(&f, k, &diag, &mut rng);
                ok &= matrix_module_check(&m, 4, &mut rng);
                checked += 1;
            }
        }
        let v = vacuum_eigencheck(&LinFun::s(&f, 0), 8).unwrap();
        ok &= v.relations_hold && v.rank == 8;
    }
    (ok, format!("{checked} matrix modules, vacuum rank 8 for f = s"))
}

fn criterion_10() -> (bool, String) {
    let f = Fq::new(2, 1).unwrap();
    let c = CarlitzCache::new(&f);
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, s) in [("genfun_binom", c.genfun_binom(10)), ("carlitz", c.carlitz_module_trunc(10))] {
        match independence_rank_check(&s, 2, 2, RankMode::Exact) {
            Ok(r) => {
                ok &= r.full_rank;
                notes.push(format!("{name}: rank {}/{}", r.rank, r.family_size));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("{name}: {e}"));
            }
        }
    }
    (ok, notes.join("; "))
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let f2 = Fq::new(2, 1).unwrap();
    let c2 = CarlitzCache::new(&f2);
    let outcomes = vec![
        run("1", "dim Gamma_nu enumeration vs binomial", 60, criterion_1),
        run("2", "module F dims and Hilbert fit (degree n+1, multiplicity n!)", 60, criterion_2),
        run("3a", "Pascal identity", 300, criterion_3a),
        run("3b", "Vandermonde identity, literal form", 300, || vandermonde(VandermondeForm::Literal)),
        run("3c", "Vandermonde identity, twisted weight D^((q-1)q^l)", 300, || vandermonde(VandermondeForm::Twisted)),
        run("4", "main K-binomial identity", 300, criterion_4),
        run("5", "PDE, d_s C = C, d_s f_i = f_(i-1), contiguity", 300, criterion_5),
        run("6", "place integrality and closed-form v(D_m)", 300, criterion_6),
        run("7a", "GK: Carlitz module -> degree 2", 1800, || {
            gk(c2.carlitz_module_trunc(10), 2, Classification::QuasiHolonomic)
        }),
        run("7b", "GK: binomial generating series -> degree 2", 1800, || {
            gk(c2.genfun_binom(10), 2, Classification::QuasiHolonomic)
        }),
        run("7c", "GK: diagonal g(st), g = e_2 -> degree 1", 1800, || {
            gk(compose_diagonal(&c2.carlitz_e(2), 10), 1, Classification::Degenerate)
        }),
        run("7d", "GK: n = 0 polynomials of s-degree <= q^2 -> degree 1", 1800, || {
            let mut ok = true;
            let mut notes = Vec::new();
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            let mut inputs: Vec<LinFun> = ["s", "s^q", "s^(q^2) + x^(1)*s"]
                .iter()
                .map(|t| LinFun::parse_in_s(&f2, t).unwrap())
                .chain([c2.carlitz_e(1), c2.carlitz_e(2)])
                .collect();
            while inputs.len() < 10 {
                let mut g = LinFun::zero(&f2, 0);
                for m in 0..=2 {
                    g.add_term(LinMonomial::new(m, vec![]), PerfectRational::random_rational(&f2, &mut rng, 2, 1));
                }
                if !g.is_zero() {
                    inputs.push(g);
                }
            }
            for g in inputs {
                let (good, note) = gk(TruncatedSeries::exact(g.clone()), 1, Classification::QuasiHolonomic);
                ok &= good;
                if !good || notes.len() < 3 {
                    notes.push(format!("{g}: {note}"));
                }
            }
            (ok, format!("10 polynomials; {}", notes.join("; ")))
        }),
        run("7f", "GK: n = 0 polynomial e_3 at j_max = 5 -> degree 1", 1800, || {
            let (good, note) = gk(TruncatedSeries::exact(c2.carlitz_e(3)), 1, Classification::QuasiHolonomic);
            let longer = gk_dimension(&TruncatedSeries::exact(c2.carlitz_e(3)), 7, RankMode::Exact).unwrap();
            (good, format!("{note}; with j_max = 7: dims {:?} degree {:?}", longer.dim_values(), longer.degree))
        }),
        run("7e", "GK: Carlitz module + binomial series -> degree 2", 1800, || {
            gk(c2.carlitz_module_trunc(10).add(&c2.genfun_binom(10)), 2, Classification::QuasiHolonomic)
        }),
        run("8", "ring associativity, apply compatibility, faithfulness", 600, criterion_8),
        run("9", "finite-dimensional modules and vacuum vector", 60, criterion_9),
        run("10", "independence family full rank", 600, criterion_10),
    ];

    let total_gk: Duration = outcomes.iter().filter(|o| o.id.starts_with('7')).map(|o| o.elapsed).sum();
    let mut unexpected = 0;
    for o in &outcomes {
        let documented = DOCUMENTED_FAILURES.iter().find(|(id, _)| *id == o.id);
        let in_time = o.elapsed <= o.budget;
        let verdict = match (o.passed && in_time, documented) {
            (true, None) => "PASS".to_string(),
            (false, Some((_, why))) => format!("FAIL (documented: {why})"),
            (true, Some(_)) => {
                unexpected += 1;
                "PASS (unexpected: listed as a documented failure)".to_string()
            }
            (false, None) => {
                unexpected += 1;
                if in_time { "FAIL".to_string() } else { format!("FAIL (over budget {:?})", o.budget) }
            }
        };
        println!("criterion {:<3} {:<60} {verdict} [{:.1}s]", o.id, o.title, o.elapsed.as_secs_f64());
        println!("    {}", o.detail);
    }
    let gk_ok = total_gk <= Duration::from_secs(1800);
    println!("criterion 7 total time {:.1}s (budget 1800s) {}", total_gk.as_secs_f64(), if gk_ok { "PASS" } else { "FAIL" });
    if !gk_ok {
        unexpected += 1;
    }
    if unexpected == 0 {
        println!("acceptance: all criteria as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
