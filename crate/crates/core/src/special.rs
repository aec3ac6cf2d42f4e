//! Carlitz factorials and polynomials, `K`-binomial coefficients, Thakur's
//! hypergeometric polynomials and their generating series.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::linfun::{LinFun, LinMonomial, SeriesComparison, TruncatedSeries};
use crate::perfect::{bracket, PerfectRational, QExp};
use crate::place::{irreducibles, Place, Valuation};

#[derive(Default)]
struct Memo {
    d: Vec<PerfectRational>,
    l: Vec<PerfectRational>,
    e: Vec<LinFun>,
    binom: HashMap<(u32, u32), PerfectRational>,
}

/// Append-only memo of `D_i`, `L_i`, `e_i` and `K`-binomial coefficients for one field.
///
/// Cloning shares the tables.
#[derive(Clone)]
pub struct CarlitzCache {
    field: Fq,
    memo: Arc<RwLock<Memo>>,
}

impl CarlitzCache {
    pub fn new(field: &Fq) -> Self {
        CarlitzCache { field: field.clone(), memo: Arc::new(RwLock::new(Memo::default())) }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn bracket(&self, i: u32) -> PerfectRational {
        bracket(&self.field, i)
    }

    /// `D_i = [i] D_{i-1}^q`, `D_0 = 1`.
    pub fn dfac(&self, i: u32) -> PerfectRational {
        if let Some(v) = self.memo.read().unwrap().d.get(i as usize) {
            return v.clone();
        }
        let mut memo = self.memo.write().unwrap();
        if memo.d.is_empty() {
            memo.d.push(PerfectRational::one(&self.field));
        }
        while memo.d.len() <= i as usize {
            let k = memo.d.len() as u32;
            let next = self.bracket(k).mul(&memo.d[k as usize - 1].frobenius());
            memo.d.push(next);
        }
        memo.d[i as usize].clone()
    }

    /// `L_i = [i] L_{i-1}`, `L_0 = 1`.
    pub fn lfac(&self, i: u32) -> PerfectRational {
        if let Some(v) = self.memo.read().unwrap().l.get(i as usize) {
            return v.clone();
        }
        let mut memo = self.memo.write().unwrap();
        if memo.l.is_empty() {
            memo.l.push(PerfectRational::one(&self.field));
        }
        while memo.l.len() <= i as usize {
            let k = memo.l.len() as u32;
            let next = self.bracket(k).mul(&memo.l[k as usize - 1]);
            memo.l.push(next);
        }
        memo.l[i as usize].clone()
    }

    /// `D_k / (D_m D_{k-m}^{q^m})`, zero outside `0 ≤ m ≤ k`.
    pub fn binom_k(&self, k: i64, m: i64) -> PerfectRational {
        if m < 0 || m > k {
            return PerfectRational::zero(&self.field);
        }
        let (k, m) = (k as u32, m as u32);
        if let Some(v) = self.memo.read().unwrap().binom.get(&(k, m)) {
            return v.clone();
        }
        let f = &self.field;
        let num = self.dfac(k);
        let den = self.dfac(m).mul(&self.dfac(k - m).q_power(m as i64));
        let v = match num.num_poly().exact_div(den.num_poly(), f) {
            Some(p) => PerfectRational::from_parts(f, 0, p, crate::poly::Poly::one()).unwrap(),
            None => num.div(&den).unwrap(),
        };
        self.memo.write().unwrap().binom.insert((k, m), v.clone());
        v
    }

    /// `e_k` by `e_k = τ e_{k-1} − D_{k-1}^{q-1} e_{k-1}`, `e_0 = s`.
    pub fn carlitz_e(&self, k: u32) -> LinFun {
        if let Some(v) = self.memo.read().unwrap().e.get(k as usize) {
            return v.clone();
        }
        let q1 = (self.field.q() - 1) as u64;
        let mut out = {
            let memo = self.memo.read().unwrap();
            memo.e.clone()
        };
        if out.is_empty() {
            out.push(LinFun::s(&self.field, 0));
        }
        while out.len() <= k as usize {
            let j = out.len() as u32;
            let prev = &out[j as usize - 1];
            let next = prev.apply_tau().sub(&prev.scale(&self.dfac(j - 1).pow(q1)));
            out.push(next);
        }
        let v = out[k as usize].clone();
        let mut memo = self.memo.write().unwrap();
        if memo.e.len() < out.len() {
            memo.e = out;
        }
        v
    }

    /// `f_k = Σ_i (−1)^{k−i} / (D_i L_{k−i}^{q^i}) s^{q^i}`.
    pub fn carlitz_f(&self, k: u32) -> LinFun {
        let f = &self.field;
        let terms = (0..=k).map(|i| {
            let den = self.dfac(i).mul(&self.lfac(k - i).q_power(i as i64));
            let sign = if (k - i).is_multiple_of(2) { 1 } else { -1 };
            let c = PerfectRational::from_int(f, sign).div(&den).unwrap();
            (LinMonomial::new(i, vec![]), c)
        });
        LinFun::from_terms(f, 0, terms)
    }

    /// Both sides of `binomK(k,m) = binomK(k−1,m−1)^q + binomK(k−1,m)^q D_m^{q−1}`.
    pub fn pascal_sides(&self, k: u32, m: u32) -> (PerfectRational, PerfectRational) {
        let (k, m) = (k as i64, m as i64);
        let q1 = (self.field.q() - 1) as u64;
        let lhs = self.binom_k(k, m);
        let a = self.binom_k(k - 1, m - 1).frobenius();
        let b = self.binom_k(k - 1, m).frobenius();
        let rhs = if b.is_zero() { a } else { a.add(&b.mul(&self.dfac(m as u32).pow(q1))) };
        (lhs, rhs)
    }

    pub fn pascal_check(&self, k: u32, m: u32) -> bool {
        let (l, r) = self.pascal_sides(k, m);
        l == r
    }

    /// Table `c_{l,i}` from `c_{l+1,i} = c_{l,i−1} + c_{l,i} D_{m−i}^{w(l)}`, `c_{0,0} = 1`.
    fn vandermonde_build(&self, m: u32, exponent: impl Fn(u32) -> u64) -> VandermondeTable {
        let f = &self.field;
        let mut rows: Vec<Vec<PerfectRational>> = vec![vec![PerfectRational::one(f)]];
        for l in 0..m {
            let prev = &rows[l as usize];
            let w = exponent(l);
            let next = (0..=l + 1)
                .map(|i| {
                    let left = if i >= 1 { prev[i as usize - 1].clone() } else { PerfectRational::zero(f) };
                    if i > l {
                        return left;
                    }
                    left.add(&prev[i as usize].mul(&self.dfac(m - i).pow(w)))
                })
                .collect();
            rows.push(next);
        }
        VandermondeTable { m, entries: rows }
    }

    /// Table with the fixed weight `D_{m−i}^{q−1}` at every step.
    pub fn vandermonde_table(&self, m: u32) -> VandermondeTable {
        let q1 = (self.field.q() - 1) as u64;
        self.vandermonde_build(m, |_| q1)
    }

    /// Table with the step-dependent weight `D_{m−i}^{(q−1) q^l}`.
    pub fn vandermonde_table_twisted(&self, m: u32) -> VandermondeTable {
        let q = self.field.q() as u64;
        self.vandermonde_build(m, |l| (q - 1) * q.pow(l))
    }

    fn vandermonde_rhs(&self, table: &VandermondeTable, k: u32, l: u32) -> PerfectRational {
        let m = table.m;
        let mut acc = PerfectRational::zero(&self.field);
        for i in 0..=l {
            let b = self.binom_k(k as i64 - l as i64, m as i64 - i as i64);
            if b.is_zero() {
                continue;
            }
            acc = acc.add(&table.get(l, i).mul(&b.q_power(l as i64)));
        }
        acc
    }

    /// Both sides of the Vandermonde identity with the literal or twisted table.
    pub fn vandermonde_sides(&self, k: u32, m: u32, l: u32, twisted: bool) -> (PerfectRational, PerfectRational) {
        assert!(l <= m && m <= k);
        let t = if twisted { self.vandermonde_table_twisted(m) } else { self.vandermonde_table(m) };
        (self.binom_k(k as i64, m as i64), self.vandermonde_rhs(&t, k, l))
    }

    /// `binomK(k,m) = Σ_i c_{l,i} binomK(k−l, m−i)^{q^l}` with [`Self::vandermonde_table`].
    pub fn vandermonde_check(&self, k: u32, m: u32, l: u32) -> bool {
        assert!(l <= m && m <= k);
        let t = self.vandermonde_table(m);
        self.binom_k(k as i64, m as i64) == self.vandermonde_rhs(&t, k, l)
    }

    /// Same identity with [`Self::vandermonde_table_twisted`].
    pub fn vandermonde_check_twisted(&self, k: u32, m: u32, l: u32) -> bool {
        assert!(l <= m && m <= k);
        let t = self.vandermonde_table_twisted(m);
        self.binom_k(k as i64, m as i64) == self.vandermonde_rhs(&t, k, l)
    }

    /// `binomK(k−1,i)^q D_i^{q−1} D_{k−i−1}^{q^i(q−1)} = D_{k−1}^{q−1} binomK(k−1,i)`.
    pub fn eq30_check(&self, k: u32, i: u32) -> bool {
        assert!(i < k);
        let q1 = (self.field.q() - 1) as u64;
        let b = self.binom_k((k - 1) as i64, i as i64);
        let lhs = b
            .frobenius()
            .mul(&self.dfac(i).pow(q1))
            .mul(&self.dfac(k - i - 1).pow(q1).q_power(i as i64));
        let rhs = self.dfac(k - 1).pow(q1).mul(&b);
        lhs == rhs
    }

    /// Both sides of `e_k(st) = Σ_m binomK(k,m) e_m(s) e_{k−m}(t)^{q^m}`.
    pub fn kbinom_sides(&self, k: u32, s: &PerfectRational, t: &PerfectRational) -> (PerfectRational, PerfectRational) {
        let lhs = self.carlitz_e(k).evaluate(&s.mul(t)).unwrap();
        let mut rhs = PerfectRational::zero(&self.field);
        for m in 0..=k {
            let es = self.carlitz_e(m).evaluate(s).unwrap();
            if es.is_zero() {
                continue;
            }
            let et = self.carlitz_e(k - m).evaluate(t).unwrap().q_power(m as i64);
            rhs = rhs.add(&self.binom_k(k as i64, m as i64).mul(&es).mul(&et));
        }
        (lhs, rhs)
    }

    pub fn kbinom_identity_check(&self, k: u32, s: &PerfectRational, t: &PerfectRational) -> Result<bool> {
        for v in [s, t] {
            if v.level() != 0 || !v.is_polynomial() {
                return Err(Error::Precondition("arguments must lie in F_q[x]".into()));
            }
        }
        let (l, r) = self.kbinom_sides(k, s, t);
        Ok(l == r)
    }

    /// `(−a)_m = (−1)^{a−m} L_{a−m}^{−q^m}` for `m ≤ a`, else 0.
    pub fn pochhammer_neg(&self, a: u32, m: u32) -> PerfectRational {
        let f = &self.field;
        if m > a {
            return PerfectRational::zero(f);
        }
        let sign = if (a - m).is_multiple_of(2) { 1 } else { -1 };
        PerfectRational::from_int(f, sign).div(&self.lfac(a - m).q_power(m as i64)).unwrap()
    }

    /// `_lF_λ(−a; −b; s)`, summed over `m ≤ min(a, b, truncation)`.
    pub fn thakur_hyp(&self, a: &[u32], b: &[u32], truncation: u32) -> LinFun {
        let f = &self.field;
        let top = a.iter().chain(b).copied().min().unwrap_or(truncation).min(truncation);
        let terms = (0..=top).map(|m| {
            let mut num = PerfectRational::one(f);
            for &ai in a {
                num = num.mul(&self.pochhammer_neg(ai, m));
            }
            let mut den = self.dfac(m);
            for &bi in b {
                den = den.mul(&self.pochhammer_neg(bi, m));
            }
            (LinMonomial::new(m, vec![]), num.div(&den).unwrap())
        });
        LinFun::from_terms(f, 0, terms)
    }

    /// `d_s F(−a; −b) = F(−a+1; −b+1)`, or `0` if some parameter is zero.
    pub fn contiguous_check(&self, a: &[u32], b: &[u32]) -> bool {
        let trunc = u32::MAX;
        let lhs = self.thakur_hyp(a, b, trunc).apply_ds().unwrap();
        if a.iter().chain(b).any(|&x| x == 0) {
            return lhs.is_zero();
        }
        let a1: Vec<u32> = a.iter().map(|x| x - 1).collect();
        let b1: Vec<u32> = b.iter().map(|x| x - 1).collect();
        lhs == self.thakur_hyp(&a1, &b1, trunc)
    }

    /// `C_s(t) = Σ_{k ≤ T} f_k(s) t^{q^k}`.
    pub fn carlitz_module_trunc(&self, order: u32) -> TruncatedSeries {
        let f = &self.field;
        let mut body = LinFun::zero(f, 1);
        for k in 0..=order {
            for (mo, c) in self.carlitz_f(k).terms() {
                body.add_term(LinMonomial::new(mo.m, vec![k]), c.clone());
            }
        }
        TruncatedSeries::new(body, order)
    }

    /// `Σ_{k ≤ T} Σ_{m ≤ k} binomK(k,m) s^{q^m} t^{q^k}`.
    pub fn genfun_binom(&self, order: u32) -> TruncatedSeries {
        let f = &self.field;
        let mut body = LinFun::zero(f, 1);
        for k in 0..=order {
            for m in 0..=k {
                body.add_term(LinMonomial::new(m, vec![k]), self.binom_k(k as i64, m as i64));
            }
        }
        TruncatedSeries::new(body, order)
    }

    /// `Σ _lF_λ(−k; −ν; s) t^{q^k} u^{q^ν}` over all parameters `≤ T`.
    pub fn genfun_hyp(&self, l: usize, lambda: usize, order: u32) -> Result<TruncatedSeries> {
        let n = l + lambda;
        if n == 0 {
            return Err(Error::Precondition("genfun_hyp needs l + λ ≥ 1".into()));
        }
        let f = &self.field;
        let mut body = LinFun::zero(f, n);
        let mut params = vec![0u32; n];
        loop {
            let h = self.thakur_hyp(&params[..l], &params[l..], order);
            for (mo, c) in h.terms() {
                body.add_term(LinMonomial::new(mo.m, params.clone()), c.clone());
            }
            let mut idx = 0;
            while idx < n && params[idx] == order {
                params[idx] = 0;
                idx += 1;
            }
            if idx == n {
                break;
            }
            params[idx] += 1;
        }
        Ok(TruncatedSeries::new(body, order))
    }

    /// `d_s f` against `Δ_t f + [1]^{1/q} f` on the validity window.
    pub fn pde_check(&self, f: &TruncatedSeries) -> Result<PdeReport> {
        let field = &self.field;
        let lhs = f.apply_ds()?;
        let rhs = f.apply_delta(1)?.add(&f.scale(&self.bracket(1).qth_root()));
        let cmp = lhs.compare(&rhs);
        let splitting = (0..=f.order).all(|mu| {
            self.bracket(mu + 1).qth_root() == self.bracket(mu).add(&self.bracket(1).qth_root())
        });
        let checked = lhs.body.restrict(cmp.window).len().max(rhs.body.restrict(cmp.window).len());
        Ok(PdeReport {
            q: field.q(),
            order: f.order,
            holds: cmp.equal && splitting,
            splitting_holds: splitting,
            window: cmp.window,
            checked_monomials: checked,
            witness: cmp.witness.map(|m| m.to_string()),
        })
    }

    pub fn pde_check_binom(&self, order: u32) -> Result<PdeReport> {
        if order < 2 {
            return Err(Error::Precondition("pde check needs T ≥ 2".into()));
        }
        self.pde_check(&self.genfun_binom(order))
    }

    /// `d_s f = f` on the validity window.
    pub fn fixed_point_check(&self, f: &TruncatedSeries) -> Result<SeriesComparison> {
        Ok(f.apply_ds()?.compare(f))
    }

    /// `v_π(binomK(k,m)) ≥ 0` over all places of degree `≤ delta_max`, and the
    /// closed form for `v_π(D_m)`.
    pub fn place_integrality_sweep(&self, k_max: u32, delta_max: u32) -> IntegralityReport {
        let mut report = IntegralityReport { q: self.field.q(), k_max, delta_max, ..Default::default() };
        for delta in 1..=delta_max {
            for place in irreducibles(&self.field, delta) {
                report.places += 1;
                for k in 0..=k_max {
                    let direct = place.valuation(&self.dfac(k));
                    let closed = dfac_valuation_closed_form(self.field.q(), delta, k);
                    report.factorials_checked += 1;
                    if direct != Valuation::Finite(closed) {
                        report.closed_form_mismatches.push(Mismatch {
                            place: place.to_string(),
                            m: k,
                            direct: direct.to_string(),
                            closed: closed.to_string(),
                        });
                    }
                    for m in 0..=k {
                        let v = place.valuation(&self.binom_k(k as i64, m as i64));
                        report.pairs_checked += 1;
                        if !v.is_nonnegative() {
                            report.violations.push(Violation {
                                place: place.to_string(),
                                k,
                                m,
                                valuation: v.to_string(),
                            });
                        }
                    }
                }
            }
        }
        report
    }

    /// `(k, m, value, [(place, v_π)])` rows for the binomial table.
    pub fn binom_table_row(&self, k: u32, m: u32, places: &[Place]) -> (PerfectRational, Vec<(String, Valuation)>) {
        let v = self.binom_k(k as i64, m as i64);
        let vals = places.iter().map(|p| (p.to_string(), p.valuation(&v))).collect();
        (v, vals)
    }

    /// `e_k(m) = 0` for every `m ∈ F_q[x]` of degree `< k`.
    pub fn carlitz_e_vanishes(&self, k: u32) -> bool {
        let f = &self.field;
        let q = f.q() as u64;
        let e = self.carlitz_e(k);
        let count = q.pow(k);
        (0..count).all(|mut idx| {
            let coeffs: Vec<FqElem> = (0..k)
                .map(|_| {
                    let c = FqElem((idx % q) as u32);
                    idx /= q;
                    c
                })
                .collect();
            e.evaluate(&PerfectRational::from_coeffs(f, &coeffs)).unwrap().is_zero()
        })
    }
}

/// `g(s t_1)` for an `n = 0` polynomial `g`: the monomial `s^{q^i}` becomes `s^{q^i} t^{q^i}`.
pub fn compose_diagonal(g: &LinFun, order: u32) -> TruncatedSeries {
    let terms = g.terms().iter().map(|(mo, c)| (LinMonomial::new(mo.m, vec![mo.m]), c.clone()));
    let body = LinFun::from_terms(g.field(), 1, terms);
    if g.terms().keys().all(|mo| mo.m <= order) {
        TruncatedSeries::exact(body)
    } else {
        TruncatedSeries::new(body, order)
    }
}

/// `v_π(D_m) = q^i (q^{jδ} − 1)/(q^δ − 1)` with `m = jδ + i`, `0 ≤ i < δ`.
pub fn dfac_valuation_closed_form(q: u32, delta: u32, m: u32) -> QExp {
    let (j, i) = (m / delta, m % delta);
    let q = q as i64;
    let v = q.pow(i) * (q.pow(j * delta) - 1) / (q.pow(delta) - 1);
    QExp::integer(v, q as u32)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub place: String,
    pub k: u32,
    pub m: u32,
    pub valuation: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub place: String,
    pub m: u32,
    pub direct: String,
    pub closed: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    pub q: u32,
    pub k_max: u32,
    pub delta_max: u32,
    pub places: usize,
    pub pairs_checked: usize,
    pub factorials_checked: usize,
    pub violations: Vec<Violation>,
    pub closed_form_mismatches: Vec<Mismatch>,
}

impl IntegralityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.closed_form_mismatches.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PdeReport {
    pub q: u32,
    pub order: u32,
    pub holds: bool,
    pub splitting_holds: bool,
    pub window: u32,
    pub checked_monomials: usize,
    pub witness: Option<String>,
}

/// Coefficients `c_{l,i}` for `0 ≤ i ≤ l ≤ m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VandermondeTable {
    pub m: u32,
    entries: Vec<Vec<PerfectRational>>,
}

impl VandermondeTable {
    /// `c_{l,i}`, zero outside `0 ≤ i ≤ l`.
    pub fn get(&self, l: u32, i: u32) -> PerfectRational {
        self.entries
            .get(l as usize)
            .and_then(|row| row.get(i as usize))
            .cloned()
            .unwrap_or_else(|| PerfectRational::zero(self.entries[0][0].field()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perfect::PerfectPoly;
    use crate::poly::Poly;

    fn cache(p: u32, nu: u32) -> CarlitzCache {
        CarlitzCache::new(&Fq::new(p, nu).unwrap())
    }

    /// `D_i` as the product of `x^{q^i} − x^{q^j}` over `j < i`.
    fn dfac_oracle(f: &Fq, i: u32) -> PerfectRational {
        let q = f.q() as u64;
        let mut acc = PerfectRational::one(f);
        for j in 0..i {
            let p = Poly::from_terms(vec![(q.pow(i), FqElem::ONE), (q.pow(j), f.neg(FqElem::ONE))], f);
            acc = acc.mul(&PerfectRational::from_poly(&PerfectPoly::new(f, 0, p)));
        }
        acc
    }

    #[test]
    fn factorials_match_product_oracle() {
        for (p, nu) in [(2, 1), (3, 1), (2, 2)] {
            let c = cache(p, nu);
            assert!(c.dfac(0).is_one());
            assert!(c.lfac(0).is_one());
            for i in 1..=5 {
                assert_eq!(c.dfac(i), dfac_oracle(c.field(), i), "q={} i={i}", c.field().q());
            }
        }
    }

    #[test]
    fn carlitz_e_and_f_agree() {
        for (p, nu) in [(2, 1), (3, 1)] {
            let c = cache(p, nu);
            let f = c.field().clone();
            assert_eq!(c.carlitz_e(0), LinFun::s(&f, 0));
            for k in 0..=6 {
                assert_eq!(c.carlitz_e(k), c.carlitz_f(k).scale(&c.dfac(k)), "k={k}");
            }
            for k in 1..=6 {
                assert_eq!(c.carlitz_f(k).apply_ds().unwrap(), c.carlitz_f(k - 1));
            }
            assert!(c.carlitz_f(0).apply_ds().unwrap().is_zero());
        }
    }

    #[test]
    fn carlitz_e_one() {
        let c = cache(3, 1);
        let f = c.field().clone();
        let e1 = LinFun::from_terms(
            &f,
            0,
            [
                (LinMonomial::new(1, vec![]), PerfectRational::one(&f)),
                (LinMonomial::new(0, vec![]), PerfectRational::from_int(&f, -1)),
            ],
        );
        assert_eq!(c.carlitz_e(1), e1);
    }

    #[test]
    fn carlitz_e_vanishing() {
        for (p, nu) in [(2, 1), (3, 1)] {
            let c = cache(p, nu);
            for k in 1..=3 {
                assert!(c.carlitz_e_vanishes(k));
            }
        }
    }

    #[test]
    fn binom_boundary_values() {
        let c = cache(2, 1);
        for k in 0..=6 {
            assert!(c.binom_k(k, 0).is_one());
            assert!(c.binom_k(k, k).is_one());
            assert!(c.binom_k(k, -1).is_zero());
            assert!(c.binom_k(k, k + 1).is_zero());
        }
        for (p, nu) in [(2, 1), (3, 1)] {
            let c = cache(p, nu);
            let q1 = (c.field().q() - 1) as u64;
            let expect = PerfectRational::one(c.field()).add(&c.bracket(1).pow(q1));
            assert_eq!(c.binom_k(2, 1), expect);
        }
    }

    #[test]
    fn binom_is_a_unit_at_x() {
        let c = cache(3, 1);
        let px = Place::x(c.field());
        for k in 0..=6 {
            for m in 0..=k {
                assert_eq!(px.valuation(&c.binom_k(k, m)), Valuation::Finite(QExp::integer(0, 3)));
            }
        }
        for i in 0..=6 {
            assert_eq!(px.valuation(&c.dfac(i)), Valuation::Finite(QExp::integer((3i64.pow(i) - 1) / 2, 3)));
            assert_eq!(px.valuation(&c.lfac(i)), Valuation::Finite(QExp::integer(i as i64, 3)));
        }
    }

    #[test]
    fn pascal_small() {
        let c = cache(3, 1);
        for k in 1..=5 {
            for m in 0..=k {
                assert!(c.pascal_check(k, m));
            }
        }
        let (l, r) = c.pascal_sides(3, 1);
        assert_ne!(l, r.add(&PerfectRational::one(c.field())));
    }

    #[test]
    fn vandermonde_low_levels() {
        let c = cache(2, 1);
        for k in 0..=5 {
            for m in 0..=k {
                assert!(c.vandermonde_check(k, m, 0));
                if m >= 1 {
                    assert!(c.vandermonde_check(k, m, 1));
                }
            }
        }
    }

    #[test]
    fn vandermonde_twisted_all_levels() {
        for (p, nu) in [(2, 1), (3, 1)] {
            let c = cache(p, nu);
            for k in 0..=5 {
                for m in 0..=k {
                    for l in 0..=m {
                        assert!(c.vandermonde_check_twisted(k, m, l), "q={} k={k} m={m} l={l}", c.field().q());
                    }
                }
            }
        }
    }

    #[test]
    fn eq30_small() {
        let c = cache(3, 1);
        for k in 1..=5 {
            for i in 0..k {
                assert!(c.eq30_check(k, i));
            }
        }
    }

    #[test]
    fn pochhammer_examples() {
        let c = cache(2, 1);
        let f = c.field().clone();
        assert!(c.pochhammer_neg(2, 3).is_zero());
        for a in 0..=4 {
            assert!(c.pochhammer_neg(a, a).is_one());
        }
        let expect = PerfectRational::one(&f).div(&c.bracket(1).pow(2)).unwrap();
        assert_eq!(c.pochhammer_neg(2, 1), expect);
    }

    #[test]
    fn hyp_examples() {
        let c = cache(3, 1);
        let f = c.field().clone();
        let h = c.thakur_hyp(&[3], &[0], 10);
        assert_eq!(h.len(), 1);
        let h = c.thakur_hyp(&[3], &[3], 10);
        let expect = LinFun::from_terms(
            &f,
            0,
            (0..=3).map(|m| (LinMonomial::new(m, vec![]), c.dfac(m).inv().unwrap())),
        );
        assert_eq!(h, expect);
        assert_eq!(c.thakur_hyp(&[4], &[], 10), c.carlitz_f(4));
        assert!(c.contiguous_check(&[3], &[2]));
        assert!(c.contiguous_check(&[0], &[2]));
    }

    #[test]
    fn genfun_binom_one() {
        let c = cache(2, 1);
        let g = c.genfun_binom(1);
        assert_eq!(g.body.len(), 3);
        for (m, k) in [(0, 0), (0, 1), (1, 1)] {
            assert!(g.body.coeff(&LinMonomial::new(m, vec![k])).is_one());
        }
    }

    #[test]
    fn carlitz_module_fixed_point() {
        let c = cache(2, 1);
        let t = c.carlitz_module_trunc(6);
        let cmp = c.fixed_point_check(&t).unwrap();
        assert!(cmp.equal);
        assert_eq!(cmp.window, 5);
        let t7 = c.carlitz_module_trunc(7).apply_ds().unwrap();
        assert!(t.compare(&t7).equal);
    }

    #[test]
    fn pde_small() {
        let c = cache(3, 1);
        let r = c.pde_check_binom(4).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.window, 3);
    }

    #[test]
    fn closed_form_example() {
        let c = cache(2, 1);
        let pl = irreducibles(c.field(), 2).remove(0);
        assert_eq!(pl.valuation(&c.bracket(2)), Valuation::Finite(QExp::integer(1, 2)));
        assert_eq!(pl.valuation(&c.dfac(2)), Valuation::Finite(dfac_valuation_closed_form(2, 2, 2)));
        let r = c.place_integrality_sweep(4, 2);
        assert!(r.passed(), "{r:?}");
    }
}
