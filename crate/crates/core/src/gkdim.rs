//! Filtration dimensions of cyclic modules `A_{n+1} f`, Hilbert-polynomial
//! fitting, and the finite-dimensional and vacuum-vector modules.
//!
//! At level `j` only coordinates with every `k ≤ V − j` are used, where `V` is
//! the validity of the input series, so truncation never reaches the ranks.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::linfun::{LinFun, LinMonomial, TruncatedSeries};
use crate::perfect::{bracket, PerfectRational, QExp};
use crate::rank::{rank, RankMode, RankResult};
use crate::ring::{dim_gamma_closed, CarlitzRing, OpMonomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    QuasiHolonomic,
    Degenerate,
    Unstable,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::QuasiHolonomic => "quasi-holonomic",
            Classification::Degenerate => "degenerate",
            Classification::Unstable => "unstable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiltrationReport {
    pub q: u32,
    pub n: usize,
    pub dims: Vec<(u32, u64)>,
    pub degree: Option<u32>,
    pub multiplicity: Option<i64>,
    pub window: Option<(u32, u32)>,
    /// `None` for an exact (untruncated) input.
    pub truncation: Option<u32>,
    pub classification: Option<Classification>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub ranks: Vec<RankResult>,
}

impl FiltrationReport {
    pub fn dim_values(&self) -> Vec<u64> {
        self.dims.iter().map(|d| d.1).collect()
    }

    /// JSON in the fixed report layout.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "n": self.n,
            "dims": self.dims,
            "degree": self.degree,
            "multiplicity": self.multiplicity,
            "window": self.window.map(|w| vec![w.0, w.1]),
            "truncation": self.truncation,
            "classification": self.classification.map(|c| c.as_str()),
            "warnings": self.warnings,
        })
    }
}

/// Images `M f` for every operator monomial of degree `≤ j_max`, each restricted
/// to the coordinates usable at its own level.
pub fn filtration_images(f: &TruncatedSeries, j_max: u32) -> Result<Vec<(OpMonomial, LinFun)>> {
    let n = f.n();
    let v = f.validity;
    let ring = CarlitzRing::new(f.field(), n);
    let base = if n == 0 { f.body.clone() } else { f.valid_part() };
    let window = |deg: u32| if n == 0 || f.is_exact() { None } else { Some(v.saturating_sub(deg)) };
    let mut out = Vec::new();
    let deltas: Vec<OpMonomial> = ring.monomials_up_to(j_max).into_iter().filter(|m| m.l == 0 && m.mu == 0).collect();
    for dm in deltas {
        let idelta: u32 = dm.is.iter().sum();
        let mut g = ring.apply_monomial(&dm, &base)?;
        for mu in 0..=(j_max - idelta) {
            if mu > 0 {
                g = g.apply_ds()?;
            }
            for l in 0..=(j_max - idelta - mu) {
                let deg = idelta + mu + l;
                let img = match window(deg) {
                    Some(w) if w < l => LinFun::zero(f.field(), n),
                    Some(w) => {
                        let mut h = g.restrict(w - l);
                        for _ in 0..l {
                            h = h.apply_tau();
                        }
                        h
                    }
                    None => {
                        let mut h = g.clone();
                        for _ in 0..l {
                            h = h.apply_tau();
                        }
                        h
                    }
                };
                out.push((OpMonomial::new(l, mu, dm.is.clone()), img));
            }
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(a.0.cmp(&b.0)));
    Ok(out)
}

/// `dim 𝔐_j` for `0 ≤ j ≤ j_max`.
pub fn filtration_dims(f: &TruncatedSeries, j_max: u32, mode: RankMode) -> Result<FiltrationReport> {
    let n = f.n();
    if f.body.is_zero() {
        return Err(Error::Precondition("filtration of the zero function".into()));
    }
    if n > 0 && !f.is_exact() && j_max + 1 > f.validity {
        return Err(Error::Precondition(format!("j_max = {j_max} needs validity ≥ {}, have {}", j_max + 1, f.validity)));
    }
    let images = filtration_images(f, j_max)?;
    let field = f.field().clone();
    let levels: Vec<u32> = (0..=j_max).collect();
    let ranks: Vec<RankResult> = {
        use rayon::prelude::*;
        levels
            .par_iter()
            .map(|&j| {
                let vs: Vec<LinFun> =
                    images.iter().filter(|(m, _)| m.degree() <= j).map(|(_, v)| v.clone()).collect();
                let window = if n == 0 || f.is_exact() { None } else { Some(f.validity - j) };
                rank(&field, &vs, window, mode)
            })
            .collect()
    };
    let mut warnings = Vec::new();
    for (j, r) in levels.iter().zip(&ranks) {
        if r.rank as u64 > dim_gamma_closed(n, *j) {
            warnings.push(format!("level {j}: dimension {} exceeds dim Γ_{j}", r.rank));
        }
        if n > 0 && !f.is_exact() && r.rank == r.cols && r.rows > r.cols {
            warnings.push(format!("level {j}: rank {} saturates the {} window coordinates", r.rank, r.cols));
        }
        if let Some(b) = r.failure_bound {
            if b > 0.0 {
                warnings.push(format!("level {j}: probabilistic rank, failure probability ≤ {b:.3e}"));
            }
        }
    }
    Ok(FiltrationReport {
        q: field.q(),
        n,
        dims: levels.iter().zip(&ranks).map(|(j, r)| (*j, r.rank as u64)).collect(),
        degree: None,
        multiplicity: None,
        window: None,
        truncation: if f.is_exact() { None } else { Some(f.order) },
        classification: None,
        warnings,
        ranks,
    })
}

/// Hilbert fit by finite differences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertFit {
    pub degree: u32,
    pub multiplicity: i64,
    pub window: (u32, u32),
}

/// Finds `d` with `d`-th differences constant and nonzero on a final run of at
/// least three values.
pub fn hilbert_fit(dims: &[i64]) -> Result<HilbertFit> {
    let stuck = || Error::NoStabilization(dims.iter().map(|&d| d as u64).collect());
    if dims.len() < 3 {
        return Err(stuck());
    }
    let mut diff: Vec<i64> = dims.to_vec();
    let mut d = 0u32;
    while diff.len() >= 3 {
        let last = *diff.last().unwrap();
        let run = diff.iter().rev().take_while(|&&x| x == last).count();
        if last != 0 && run >= 3 {
            let start = diff.len() - run;
            return Ok(HilbertFit {
                degree: d,
                multiplicity: last,
                window: (start as u32, (dims.len() - 1) as u32),
            });
        }
        diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
        d += 1;
    }
    Err(stuck())
}

/// Filtration dimensions plus the fitted Hilbert polynomial and classification.
pub fn gk_dimension(f: &TruncatedSeries, j_max: u32, mode: RankMode) -> Result<FiltrationReport> {
    let mut r = filtration_dims(f, j_max, mode)?;
    let vals: Vec<i64> = r.dim_values().iter().map(|&d| d as i64).collect();
    let expected = r.n as u32 + 1;
    match hilbert_fit(&vals) {
        Ok(fit) => {
            r.degree = Some(fit.degree);
            r.multiplicity = Some(fit.multiplicity);
            r.window = Some(fit.window);
            r.classification = Some(if fit.degree == expected {
                Classification::QuasiHolonomic
            } else if fit.degree < expected {
                Classification::Degenerate
            } else {
                r.warnings.push(format!(
                    "fitted degree {} exceeds n + 1 = {expected}; truncation artifact suspected",
                    fit.degree
                ));
                Classification::Unstable
            });
        }
        Err(_) => {
            r.classification = Some(Classification::Unstable);
            r.warnings.push("no stabilized difference window".into());
        }
    }
    if r.n > 0 && !f.is_exact() {
        r.warnings.push("non-sparseness cannot be decided from a truncation".into());
    }
    Ok(r)
}

/// `S_n(N) = 1^n + … + (N−1)^n`.
fn power_sum(n: u32, big_n: u64) -> u64 {
    (1..big_n).map(|i| i.pow(n)).sum()
}

/// `(j+1)^n + S_n(j+1)`.
pub fn module_f_dims_closed(n: u32, j: u64) -> u64 {
    (j + 1).pow(n) + power_sum(n, j + 1)
}

/// Count of `(m, k_1..k_n)` with `m ≤ min k` and every `k ≤ j`.
pub fn module_f_dims_enumerated(n: u32, j: u64) -> u64 {
    let mut count = 0;
    let mut ks = vec![0u64; n as usize];
    loop {
        let mn = ks.iter().copied().min().unwrap_or(j);
        count += mn + 1;
        let mut idx = 0;
        loop {
            if idx == ks.len() {
                return count;
            }
            if ks[idx] < j {
                ks[idx] += 1;
                break;
            }
            ks[idx] = 0;
            idx += 1;
        }
    }
}

/// Closed form and enumeration; errors if they differ.
pub fn module_f_dims(n: u32, j: u64) -> Result<u64> {
    let a = module_f_dims_closed(n, j);
    let b = module_f_dims_enumerated(n, j);
    if a != b {
        return Err(Error::Precondition(format!("closed form {a} ≠ enumeration {b} at n={n}, j={j}")));
    }
    Ok(a)
}

/// The `k`-dimensional `A_1`-module: `τ(c e_j) = c^q e_j`, `d_s e_j = Σ_i λ_{ij} e_i`.
#[derive(Clone, Debug)]
pub struct MatrixModuleA1 {
    field: Fq,
    k: usize,
    lambda: Vec<Vec<PerfectRational>>,
}

/// `−x^{1/q}`, a root of `λ^q − λ + [1]^{1/q} = 0`.
pub fn default_diagonal(field: &Fq) -> PerfectRational {
    PerfectRational::x(field).qth_root().neg()
}

/// `λ^q − λ + [1]^{1/q}`.
pub fn artin_schreier_residual(lambda: &PerfectRational) -> PerfectRational {
    let f = lambda.field();
    lambda.frobenius().sub(lambda).add(&bracket(f, 1).qth_root())
}

impl MatrixModuleA1 {
    pub fn new(field: &Fq, lambda: Vec<Vec<PerfectRational>>) -> Result<Self> {
        let k = lambda.len();
        if k == 0 || lambda.iter().any(|r| r.len() != k) {
            return Err(Error::Precondition("square nonempty matrix required".into()));
        }
        Ok(MatrixModuleA1 { field: field.clone(), k, lambda })
    }

    /// Random off-diagonal entries in `F_q`; diagonal `diag`.
    pub fn random<R: Rng>(field: &Fq, k: usize, diag: &PerfectRational, rng: &mut R) -> Self {
        let lambda = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            diag.clone()
                        } else {
                            PerfectRational::constant(field, FqElem(rng.gen_range(0..field.q())))
                        }
                    })
                    .collect()
            })
            .collect();
        MatrixModuleA1 { field: field.clone(), k, lambda }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    /// Off-diagonal entries in `F_q` and diagonal entries solving the Artin–Schreier equation.
    pub fn invariants_hold(&self) -> bool {
        (0..self.k).all(|i| {
            (0..self.k).all(|j| {
                if i == j {
                    artin_schreier_residual(&self.lambda[i][i]).is_zero()
                } else {
                    self.lambda[i][j].as_constant().is_some() || self.lambda[i][j].is_zero()
                }
            })
        })
    }

    pub fn tau(&self, v: &[PerfectRational]) -> Vec<PerfectRational> {
        v.iter().map(PerfectRational::frobenius).collect()
    }

    pub fn ds(&self, v: &[PerfectRational]) -> Vec<PerfectRational> {
        let mut out = vec![PerfectRational::zero(&self.field); self.k];
        for (j, c) in v.iter().enumerate() {
            let r = c.qth_root();
            if r.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = slot.add(&r.mul(&self.lambda[i][j]));
            }
        }
        out
    }

    /// `d_s τ v − τ d_s v − [1]^{1/q} v`.
    pub fn commutation_residual(&self, v: &[PerfectRational]) -> Vec<PerfectRational> {
        let one_q = bracket(&self.field, 1).qth_root();
        let a = self.ds(&self.tau(v));
        let b = self.tau(&self.ds(v));
        a.iter().zip(&b).zip(v).map(|((x, y), z)| x.sub(y).sub(&z.mul(&one_q))).collect()
    }
}

/// Checks the module invariants and the commutation identity on random vectors.
pub fn matrix_module_check<R: Rng>(m: &MatrixModuleA1, trials: usize, rng: &mut R) -> bool {
    if !m.invariants_hold() {
        return false;
    }
    (0..trials).all(|_| {
        let mut v = Vec::with_capacity(m.k);
        for _ in 0..m.k {
            let level = rng.gen_range(0..=1);
            v.push(PerfectRational::random_rational(&m.field, rng, 2, level));
        }
        m.commutation_residual(&v).iter().all(PerfectRational::is_zero)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VacuumReport {
    pub relations_hold: bool,
    pub rank: usize,
    pub m_max: u32,
}

/// For `d_s f = 0`: `d_s τ^m f = [m]^{1/q} τ^{m−1} f` for `m ≤ m_max`, and
/// independence of `f, τf, …, τ^{m_max−1} f`.
pub fn vacuum_eigencheck(f: &LinFun, m_max: u32) -> Result<VacuumReport> {
    let field = f.field().clone();
    if f.is_zero() || !f.apply_ds()?.is_zero() {
        return Err(Error::Precondition("vacuum vector must be nonzero with d_s f = 0".into()));
    }
    let mut powers = vec![f.clone()];
    for m in 1..=m_max {
        let next = powers[m as usize - 1].apply_tau();
        if next.is_zero() {
            return Err(Error::Precondition(format!("τ^{m} f = 0")));
        }
        powers.push(next);
    }
    let relations_hold = (1..=m_max).all(|m| {
        let lhs = powers[m as usize].apply_ds().unwrap();
        let rhs = powers[m as usize - 1].scale(&bracket(&field, m).qth_root());
        lhs == rhs
    });
    let family: Vec<LinFun> = powers[..m_max as usize].to_vec();
    let r = rank(&field, &family, None, RankMode::Exact);
    Ok(VacuumReport { relations_hold, rank: r.rank, m_max })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportProfile {
    /// `(m, k-tuples with nonzero coefficient)`.
    pub rows: Vec<(u32, Vec<Vec<u32>>)>,
    pub diagonal_only: bool,
    pub triangular: bool,
    pub note: &'static str,
}

/// Support of `f` grouped by `m`; a heuristic witness only.
pub fn support_profile(f: &TruncatedSeries) -> SupportProfile {
    let mut rows: Vec<(u32, Vec<Vec<u32>>)> = Vec::new();
    for mo in f.body.terms().keys() {
        match rows.last_mut() {
            Some((m, ks)) if *m == mo.m => ks.push(mo.ks.clone()),
            _ => rows.push((mo.m, vec![mo.ks.clone()])),
        }
    }
    let nonempty = !rows.is_empty();
    let diagonal_only = nonempty && f.body.terms().keys().all(|mo| mo.ks.iter().all(|&k| k == mo.m));
    let top = if f.is_exact() { f.body.terms().keys().map(LinMonomial::max_k).max().unwrap_or(0) } else { f.validity };
    let triangular = nonempty
        && f.n() == 1
        && (0..=top).all(|k| (0..=k).all(|m| !f.body.coeff(&LinMonomial::new(m, vec![k])).is_zero()));
    SupportProfile {
        rows,
        diagonal_only,
        triangular,
        note: "finite-window heuristic; non-sparseness is asymptotic",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub family_size: usize,
    pub rank: usize,
    pub full_rank: bool,
}

/// Rank of `{(τ d_s)^λ Δ^J f : λ ≤ Λ, J ≤ J_max componentwise}`.
pub fn independence_rank_check(f: &TruncatedSeries, big_lambda: u32, j_max: u32, mode: RankMode) -> Result<IndependenceReport> {
    let n = f.n();
    if big_lambda + j_max + 1 > f.validity {
        return Err(Error::Precondition("Λ + J must stay below the validity window".into()));
    }
    let field = f.field().clone();
    let mut family = Vec::new();
    let mut js = vec![0u32; n];
    loop {
        let mut g = f.clone();
        for (j, &e) in js.iter().enumerate() {
            for _ in 0..e {
                g = g.apply_delta(j + 1)?;
            }
        }
        for lam in 0..=big_lambda {
            if lam > 0 {
                g = g.apply_ds()?.apply_tau();
            }
            family.push(g.clone());
        }
        let mut idx = 0;
        while idx < n && js[idx] == j_max {
            js[idx] = 0;
            idx += 1;
        }
        if idx == n {
            break;
        }
        js[idx] += 1;
    }
    let window = if f.is_exact() { None } else { Some(f.validity.saturating_sub(big_lambda)) };
    let vectors: Vec<LinFun> = family.iter().map(|s| s.body.clone()).collect();
    let r = rank(&field, &vectors, window, mode);
    Ok(IndependenceReport { family_size: family.len(), rank: r.rank, full_rank: r.rank == family.len() })
}

/// `v_x` shorthand used by reports.
pub fn x_valuation(a: &PerfectRational) -> Option<QExp> {
    crate::place::Place::x(a.field()).valuation(a).finite()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{compose_diagonal, CarlitzCache};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hilbert_fit_examples() {
        assert_eq!(hilbert_fit(&[1, 3, 5, 7, 9]).unwrap(), HilbertFit { degree: 1, multiplicity: 2, window: (0, 4) });
        let b: Vec<i64> = (0..=6).map(|j| ((j + 3) * (j + 2) * (j + 1) / 6) as i64).collect();
        let fit = hilbert_fit(&b).unwrap();
        assert_eq!((fit.degree, fit.multiplicity), (3, 1));
        assert_eq!(hilbert_fit(&[1, 2, 3, 4]).unwrap().degree, 1);
        assert!(matches!(hilbert_fit(&[1, 2, 4, 8, 16]), Err(Error::NoStabilization(_))));
    }

    #[test]
    fn module_f_examples() {
        assert_eq!(module_f_dims(1, 1).unwrap(), 3);
        let seq: Vec<i64> = (0..=6).map(|j| module_f_dims(1, j).unwrap() as i64).collect();
        let fit = hilbert_fit(&seq).unwrap();
        assert_eq!((fit.degree, fit.multiplicity), (2, 1));
        let seq: Vec<i64> = (0..=6).map(|j| module_f_dims(2, j).unwrap() as i64).collect();
        let fit = hilbert_fit(&seq).unwrap();
        assert_eq!((fit.degree, fit.multiplicity), (3, 2));
    }

    #[test]
    fn small_n0_filtrations() {
        let f = Fq::new(2, 1).unwrap();
        let s = TruncatedSeries::new(LinFun::s(&f, 0), 0);
        let r = filtration_dims(&s, 4, RankMode::Exact).unwrap();
        assert_eq!(r.dim_values(), vec![1, 2, 3, 4, 5]);
        let sq = LinFun::monomial(&f, LinMonomial::new(1, vec![]), PerfectRational::one(&f));
        let r = gk_dimension(&TruncatedSeries::new(sq, 0), 5, RankMode::Exact).unwrap();
        assert_eq!(r.dim_values(), vec![1, 3, 4, 5, 6, 7]);
        assert_eq!((r.degree, r.multiplicity), (Some(1), Some(1)));
    }

    #[test]
    fn diagonal_root_and_module() {
        for p in [2, 3, 5] {
            let f = Fq::new(p, 1).unwrap();
            assert!(artin_schreier_residual(&default_diagonal(&f)).is_zero());
            assert!(!artin_schreier_residual(&PerfectRational::x(&f)).is_zero());
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
            let m = MatrixModuleA1::random(&f, 3, &default_diagonal(&f), &mut rng);
            assert!(matrix_module_check(&m, 10, &mut rng));
            let bad = MatrixModuleA1::random(&f, 2, &PerfectRational::x(&f), &mut rng);
            assert!(!matrix_module_check(&bad, 5, &mut rng));
        }
    }

    #[test]
    fn vacuum_for_s() {
        let f = Fq::new(3, 1).unwrap();
        let r = vacuum_eigencheck(&LinFun::s(&f, 0), 6).unwrap();
        assert!(r.relations_hold);
        assert_eq!(r.rank, 6);
        let sq = LinFun::monomial(&f, LinMonomial::new(1, vec![]), PerfectRational::one(&f));
        assert!(vacuum_eigencheck(&sq, 3).is_err());
    }

    #[test]
    fn profiles() {
        let f = Fq::new(2, 1).unwrap();
        let c = CarlitzCache::new(&f);
        let p = support_profile(&c.genfun_binom(4));
        assert!(p.triangular && !p.diagonal_only);
        let d = support_profile(&compose_diagonal(&c.carlitz_e(2), 6));
        assert!(d.diagonal_only);
        let z = support_profile(&TruncatedSeries::new(LinFun::zero(&f, 1), 3));
        assert!(z.rows.is_empty());
    }
}
