//! The Carlitz ring `A_{n+1}` generated by `τ`, `d_s`, `Δ_1..Δ_n` over the
//! perfect closure, kept in the normal form `Σ c τ^l d_s^μ Δ^I`.
//!
//! Products use closed forms of the commutation rules:
//!
//! * `Δ_j τ^l = τ^l (Δ_j + [l]^{1/q^l})`
//! * `Δ_j d^μ = d^μ (Δ_j − [μ])`
//! * `d^μ τ^l = W(μ,l)` with `W(μ,l) = W(μ−1,l)·d + [l]^{1/q^μ} W(μ−1,l−1)`
//! * `τλ = λ^q τ`, `dλ = λ^{1/q} d`, `Δλ = λΔ`
//!
//! [`rewrite`] holds the plain adjacent-pair rewriting normalizer.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::linfun::{LinFun, LinMonomial, TruncatedSeries};
use crate::perfect::{bracket, PerfectRational, RationalJson};

/// `τ^l d_s^μ Δ_1^{i_1} … Δ_n^{i_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpMonomial {
    pub l: u32,
    pub mu: u32,
    pub is: Vec<u32>,
}

impl OpMonomial {
    pub fn new(l: u32, mu: u32, is: Vec<u32>) -> Self {
        OpMonomial { l, mu, is }
    }

    pub fn identity(n: usize) -> Self {
        OpMonomial { l: 0, mu: 0, is: vec![0; n] }
    }

    /// Filtration degree `l + μ + Σ i_j`.
    pub fn degree(&self) -> u32 {
        self.l + self.mu + self.is.iter().sum::<u32>()
    }
}

impl fmt::Display for OpMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T^{} * D^{}", self.l, self.mu)?;
        for (j, i) in self.is.iter().enumerate() {
            write!(f, " * G{}^{}", j + 1, i)?;
        }
        Ok(())
    }
}

/// An element of `A_{n+1}` in normal form; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElem {
    field: Fq,
    n: usize,
    terms: BTreeMap<OpMonomial, PerfectRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingElemJson {
    pub n: usize,
    pub terms: Vec<(Vec<u32>, RationalJson)>,
}

impl RingElem {
    pub fn zero(field: &Fq, n: usize) -> Self {
        RingElem { field: field.clone(), n, terms: BTreeMap::new() }
    }

    pub fn scalar(field: &Fq, n: usize, c: PerfectRational) -> Self {
        Self::monomial(field, OpMonomial::identity(n), c)
    }

    pub fn one(field: &Fq, n: usize) -> Self {
        Self::scalar(field, n, PerfectRational::one(field))
    }

    pub fn monomial(field: &Fq, mono: OpMonomial, c: PerfectRational) -> Self {
        let n = mono.is.len();
        let mut r = Self::zero(field, n);
        r.add_term(mono, c);
        r
    }

    pub fn tau(field: &Fq, n: usize) -> Self {
        Self::monomial(field, OpMonomial::new(1, 0, vec![0; n]), PerfectRational::one(field))
    }

    pub fn ds(field: &Fq, n: usize) -> Self {
        Self::monomial(field, OpMonomial::new(0, 1, vec![0; n]), PerfectRational::one(field))
    }

    /// `Δ_j`, 1-based.
    pub fn delta(field: &Fq, n: usize, j: usize) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        let mut is = vec![0; n];
        is[j - 1] = 1;
        Ok(Self::monomial(field, OpMonomial::new(0, 0, is), PerfectRational::one(field)))
    }

    pub fn add_term(&mut self, mono: OpMonomial, c: PerfectRational) {
        assert_eq!(mono.is.len(), self.n, "monomial arity");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn terms(&self) -> &BTreeMap<OpMonomial, PerfectRational> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest filtration degree of a term (`None` for zero).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(OpMonomial::degree).max()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "arity");
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        RingElem { terms, ..Self::zero(&self.field, self.n) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Left scalar multiple `λ·a`.
    pub fn scale(&self, lambda: &PerfectRational) -> Self {
        let mut r = Self::zero(&self.field, self.n);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), lambda.mul(c));
        }
        r
    }

    pub fn to_json(&self) -> RingElemJson {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut key = vec![m.l, m.mu];
                key.extend(&m.is);
                (key, c.to_json())
            })
            .collect();
        RingElemJson { n: self.n, terms }
    }

    pub fn from_json(field: &Fq, j: &RingElemJson) -> Result<Self> {
        let mut r = Self::zero(field, j.n);
        for (key, c) in &j.terms {
            if key.len() != j.n + 2 {
                return Err(Error::ArityMismatch { expected: j.n + 2, got: key.len() });
            }
            r.add_term(OpMonomial::new(key[0], key[1], key[2..].to_vec()), PerfectRational::from_json(field, c)?);
        }
        Ok(r)
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let cs = c.to_string();
                let cs = if c.is_polynomial() && cs.contains(" + ") { format!("({cs})") } else { cs };
                format!("{cs} * {m}")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

type WTerms = Arc<Vec<(u32, u32, PerfectRational)>>;

/// Multiplication context for `A_{n+1}` over a fixed field; caches `d^μ τ^l`.
#[derive(Clone)]
pub struct CarlitzRing {
    field: Fq,
    n: usize,
    w: Arc<RwLock<HashMap<(u32, u32), WTerms>>>,
}

impl CarlitzRing {
    pub fn new(field: &Fq, n: usize) -> Self {
        CarlitzRing { field: field.clone(), n, w: Arc::new(RwLock::new(HashMap::new())) }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }

    /// Normal form of `d^μ τ^l` as `(a, b, c)` meaning `c τ^a d^b`.
    pub fn dtau(&self, mu: u32, l: u32) -> WTerms {
        if let Some(w) = self.w.read().unwrap().get(&(mu, l)) {
            return w.clone();
        }
        let out: Vec<(u32, u32, PerfectRational)> = if mu == 0 || l == 0 {
            vec![(l, mu, PerfectRational::one(&self.field))]
        } else {
            let mut acc: BTreeMap<(u32, u32), PerfectRational> = BTreeMap::new();
            for (a, b, c) in self.dtau(mu - 1, l).iter() {
                acc.insert((*a, b + 1), c.clone());
            }
            let lam = bracket(&self.field, l).q_power(-(mu as i64));
            for (a, b, c) in self.dtau(mu - 1, l - 1).iter() {
                let v = lam.mul(c);
                let e = acc.entry((*a, *b)).or_insert_with(|| PerfectRational::zero(&self.field));
                *e = e.add(&v);
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect()
        };
        let out = Arc::new(out);
        self.w.write().unwrap().insert((mu, l), out.clone());
        out
    }

    fn binom_fq(&self, n: u32, k: u32) -> PerfectRational {
        // Lucas: binomial coefficient mod p digitwise.
        let p = self.field.p();
        let (mut n, mut k) = (n, k);
        let mut r: u64 = 1;
        while n > 0 || k > 0 {
            let (a, b) = (n % p, k % p);
            if b > a {
                return PerfectRational::zero(&self.field);
            }
            let mut c: u64 = 1;
            for t in 0..b {
                c = c * (a - t) as u64 / (t + 1) as u64;
            }
            r = r * (c % p as u64) % p as u64;
            n /= p;
            k /= p;
        }
        PerfectRational::from_int(&self.field, r as i64)
    }

    /// `Π_j (Δ_j + c)^{i_j} = Σ_J (Π_j binom(i_j,J_j) c^{i_j−J_j}) Δ^J`.
    fn shift_expand(&self, is: &[u32], c: &PerfectRational) -> Vec<(Vec<u32>, PerfectRational)> {
        let mut out = vec![(Vec::with_capacity(is.len()), PerfectRational::one(&self.field))];
        for &i in is {
            let mut next = Vec::new();
            for (js, coef) in &out {
                for j in 0..=i {
                    let w = self.binom_fq(i, j).mul(&c.pow((i - j) as u64));
                    if w.is_zero() {
                        continue;
                    }
                    let mut js2 = js.clone();
                    js2.push(j);
                    next.push((js2, coef.mul(&w)));
                }
            }
            out = next;
        }
        out
    }

    fn mul_monomials(
        &self,
        c1: &PerfectRational,
        m1: &OpMonomial,
        c2: &PerfectRational,
        m2: &OpMonomial,
        out: &mut RingElem,
    ) {
        let f = &self.field;
        let (l1, mu1, l2, mu2) = (m1.l as i64, m1.mu as i64, m2.l as i64, m2.mu as i64);
        let base = c1.mul(&c2.q_power(l1 - mu1));
        if base.is_zero() {
            return;
        }
        let a_list = if m2.l == 0 {
            vec![(m1.is.clone(), PerfectRational::one(f))]
        } else {
            self.shift_expand(&m1.is, &bracket(f, m2.l).q_power(-l2))
        };
        let w = self.dtau(m1.mu, m2.l);
        let minus_mu = bracket(f, m2.mu).neg();
        for (js, a) in a_list {
            let b_list = if m2.mu == 0 { vec![(js, PerfectRational::one(f))] } else { self.shift_expand(&js, &minus_mu) };
            let a_moved = a.q_power(mu2);
            for (ks, b) in b_list {
                let s = a_moved.mul(&b).q_power(l1 + l2 - mu1 - mu2);
                let coef = base.mul(&s);
                if coef.is_zero() {
                    continue;
                }
                let is: Vec<u32> = ks.iter().zip(&m2.is).map(|(x, y)| x + y).collect();
                for (ta, db, wc) in w.iter() {
                    let mono = OpMonomial::new(m1.l + ta, db + m2.mu, is.clone());
                    out.add_term(mono, coef.mul(&wc.q_power(l1)));
                }
            }
        }
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        assert_eq!(a.n, self.n, "arity");
        assert_eq!(b.n, self.n, "arity");
        let mut out = RingElem::zero(&self.field, self.n);
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                self.mul_monomials(c1, m1, c2, m2, &mut out);
            }
        }
        out
    }

    pub fn pow(&self, a: &RingElem, e: u32) -> RingElem {
        let mut r = RingElem::one(&self.field, self.n);
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    /// `a·b − b·a`.
    pub fn commutator(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// Applies `τ^l d^μ Δ^I` (no scalar) to `f`: `Δ`'s first, then `d_s`, then `τ`.
    pub fn apply_monomial(&self, m: &OpMonomial, f: &LinFun) -> Result<LinFun> {
        let mut g = f.clone();
        for (j, &i) in m.is.iter().enumerate() {
            for _ in 0..i {
                g = g.apply_delta(j + 1)?;
            }
        }
        for _ in 0..m.mu {
            g = g.apply_ds()?;
        }
        for _ in 0..m.l {
            g = g.apply_tau();
        }
        Ok(g)
    }

    pub fn apply(&self, a: &RingElem, f: &LinFun) -> Result<LinFun> {
        if f.n() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: f.n() });
        }
        let mut acc = LinFun::zero(&self.field, self.n);
        for (m, c) in &a.terms {
            acc = acc.add(&self.apply_monomial(m, f)?.scale(c));
        }
        Ok(acc)
    }

    /// Same as [`Self::apply`] on a truncated series; validity drops by the largest `μ`.
    pub fn apply_series(&self, a: &RingElem, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        let mut acc: Option<TruncatedSeries> = None;
        for (m, c) in &a.terms {
            let mut g = f.clone();
            for (j, &i) in m.is.iter().enumerate() {
                for _ in 0..i {
                    g = g.apply_delta(j + 1)?;
                }
            }
            for _ in 0..m.mu {
                g = g.apply_ds()?;
            }
            for _ in 0..m.l {
                g = g.apply_tau();
            }
            let g = g.scale(c);
            acc = Some(match acc {
                None => g,
                Some(s) => s.add(&g),
            });
        }
        Ok(acc.unwrap_or_else(|| TruncatedSeries::new(LinFun::zero(&self.field, self.n), f.order)))
    }

    /// Searches probe monomials `s^{q^μ'} t^{q^k}` for one on which `a` acts nonzero.
    pub fn probe_independence(&self, a: &RingElem, bound: u32) -> Result<Option<LinMonomial>> {
        if a.is_zero() {
            return Err(Error::Precondition("probe_independence needs a nonzero element".into()));
        }
        for mu in 0..=bound {
            for extra in 0..=bound {
                let mono = LinMonomial::new(mu, vec![mu + extra; self.n]);
                let probe = LinFun::monomial(&self.field, mono.clone(), PerfectRational::one(&self.field));
                match self.apply(a, &probe) {
                    Ok(g) if !g.is_zero() => return Ok(Some(mono)),
                    _ => {}
                }
            }
        }
        Ok(None)
    }

    /// Operator monomials of filtration degree `≤ nu`.
    pub fn monomials_up_to(&self, nu: u32) -> Vec<OpMonomial> {
        let mut out = Vec::new();
        let slots = self.n + 2;
        let mut v = vec![0u32; slots];
        loop {
            if v.iter().sum::<u32>() <= nu {
                out.push(OpMonomial::new(v[0], v[1], v[2..].to_vec()));
            }
            let mut idx = 0;
            loop {
                if idx == slots {
                    out.sort();
                    return out;
                }
                if v[idx] < nu {
                    v[idx] += 1;
                    break;
                }
                v[idx] = 0;
                idx += 1;
            }
        }
    }

    /// Random element: up to `max_terms` monomials of degree `≤ deg`, polynomial
    /// coefficients of `x`-degree `≤ coeff_deg` at level 0 or 1.
    pub fn random_elem<R: Rng>(&self, rng: &mut R, deg: u32, max_terms: usize, coeff_deg: u64) -> RingElem {
        let monos = self.monomials_up_to(deg);
        let mut r = RingElem::zero(&self.field, self.n);
        let count = rng.gen_range(1..=max_terms);
        for _ in 0..count {
            let m = monos[rng.gen_range(0..monos.len())].clone();
            let level = rng.gen_range(0..=1);
            r.add_term(m, PerfectRational::random_poly(&self.field, rng, coeff_deg, level));
        }
        r
    }

    /// Random function in F-shape with `k_j ≤ kmax`.
    pub fn random_fun<R: Rng>(&self, rng: &mut R, kmax: u32, max_terms: usize, coeff_deg: u64) -> LinFun {
        let mut f = LinFun::zero(&self.field, self.n);
        let count = rng.gen_range(1..=max_terms);
        for _ in 0..count {
            let ks: Vec<u32> = (0..self.n).map(|_| rng.gen_range(0..=kmax)).collect();
            let top = ks.iter().copied().min().unwrap_or(kmax);
            let m = rng.gen_range(0..=top);
            let level = rng.gen_range(0..=1);
            f.add_term(LinMonomial::new(m, ks), PerfectRational::random_poly(&self.field, rng, coeff_deg, level));
        }
        f
    }
}

/// `binom(ν+n+2, n+2)`.
pub fn dim_gamma_closed(n: usize, nu: u32) -> u64 {
    let top = nu as u128 + n as u128 + 2;
    let k = n as u128 + 2;
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (top - i) / (i + 1);
    }
    r as u64
}

/// `(enumerated, closed form)` counts of monomials of degree `≤ nu`.
pub fn dim_gamma(n: usize, nu: u32) -> (u64, u64) {
    let ring_monos = {
        let mut count = 0u64;
        let slots = n + 2;
        let mut v = vec![0u32; slots];
        loop {
            if v.iter().sum::<u32>() <= nu {
                count += 1;
            }
            let mut idx = 0;
            let mut done = false;
            loop {
                if idx == slots {
                    done = true;
                    break;
                }
                if v[idx] < nu {
                    v[idx] += 1;
                    break;
                }
                v[idx] = 0;
                idx += 1;
            }
            if done {
                break;
            }
        }
        count
    };
    (ring_monos, dim_gamma_closed(n, nu))
}

/// Adjacent-pair rewriting into normal form.
pub mod rewrite {
    use super::*;

    /// A letter of an operator word.
    #[derive(Clone, Debug, PartialEq, Eq)]
    pub enum Letter {
        Scalar(PerfectRational),
        Tau,
        Ds,
        Delta(usize),
    }

    fn rank(l: &Letter) -> usize {
        match l {
            Letter::Scalar(_) => 0,
            Letter::Tau => 1,
            Letter::Ds => 2,
            Letter::Delta(j) => 2 + j,
        }
    }

    /// Letters of `c τ^l d^μ Δ^I`, scalar first.
    pub fn word_of(c: &PerfectRational, m: &OpMonomial) -> Vec<Letter> {
        let mut w = vec![Letter::Scalar(c.clone())];
        w.extend(std::iter::repeat_n(Letter::Tau, m.l as usize));
        w.extend(std::iter::repeat_n(Letter::Ds, m.mu as usize));
        for (j, &i) in m.is.iter().enumerate() {
            w.extend(std::iter::repeat_n(Letter::Delta(j + 1), i as usize));
        }
        w
    }

    /// Rewrites the leftmost out-of-order pair; `None` if `w` is ordered.
    fn step(field: &Fq, w: &[Letter]) -> Option<Vec<Vec<Letter>>> {
        let pos = (0..w.len().saturating_sub(1)).find(|&i| {
            let (a, b) = (&w[i], &w[i + 1]);
            rank(a) > rank(b) || (matches!(a, Letter::Scalar(_)) && matches!(b, Letter::Scalar(_)))
        })?;
        let pre = &w[..pos];
        let post = &w[pos + 2..];
        let build = |mid: Vec<Letter>| {
            let mut v = pre.to_vec();
            v.extend(mid);
            v.extend_from_slice(post);
            v
        };
        let one_q = bracket(field, 1).qth_root();
        let out = match (&w[pos], &w[pos + 1]) {
            (Letter::Scalar(a), Letter::Scalar(b)) => vec![build(vec![Letter::Scalar(a.mul(b))])],
            (Letter::Tau, Letter::Scalar(c)) => vec![build(vec![Letter::Scalar(c.frobenius()), Letter::Tau])],
            (Letter::Ds, Letter::Scalar(c)) => vec![build(vec![Letter::Scalar(c.qth_root()), Letter::Ds])],
            (Letter::Delta(j), Letter::Scalar(c)) => vec![build(vec![Letter::Scalar(c.clone()), Letter::Delta(*j)])],
            (Letter::Ds, Letter::Tau) => vec![
                build(vec![Letter::Tau, Letter::Ds]),
                build(vec![Letter::Scalar(one_q)]),
            ],
            (Letter::Delta(j), Letter::Tau) => vec![
                build(vec![Letter::Tau, Letter::Delta(*j)]),
                build(vec![Letter::Scalar(bracket(field, 1)), Letter::Tau]),
            ],
            (Letter::Delta(j), Letter::Ds) => vec![
                build(vec![Letter::Ds, Letter::Delta(*j)]),
                build(vec![Letter::Scalar(one_q.neg()), Letter::Ds]),
            ],
            (Letter::Delta(i), Letter::Delta(j)) => vec![build(vec![Letter::Delta(*j), Letter::Delta(*i)])],
            _ => unreachable!("pair is out of order"),
        };
        Some(out)
    }

    /// Reads an ordered word as `(coefficient, monomial)`.
    fn read(field: &Fq, n: usize, w: &[Letter]) -> (PerfectRational, OpMonomial) {
        let mut c = PerfectRational::one(field);
        let mut m = OpMonomial::identity(n);
        for l in w {
            match l {
                Letter::Scalar(s) => c = c.mul(s),
                Letter::Tau => m.l += 1,
                Letter::Ds => m.mu += 1,
                Letter::Delta(j) => m.is[j - 1] += 1,
            }
        }
        (c, m)
    }

    /// Normal form of a sum of words.
    pub fn normalize(field: &Fq, n: usize, words: Vec<Vec<Letter>>) -> RingElem {
        let mut out = RingElem::zero(field, n);
        let mut stack = words;
        while let Some(w) = stack.pop() {
            if w.iter().any(|l| matches!(l, Letter::Scalar(c) if c.is_zero())) {
                continue;
            }
            match step(field, &w) {
                Some(ws) => stack.extend(ws),
                None => {
                    let (c, m) = read(field, n, &w);
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    /// Product by concatenating words and rewriting.
    pub fn mul(a: &RingElem, b: &RingElem) -> RingElem {
        let mut words = Vec::new();
        for (m1, c1) in a.terms() {
            for (m2, c2) in b.terms() {
                let mut w = word_of(c1, m1);
                w.extend(word_of(c2, m2));
                words.push(w);
            }
        }
        normalize(a.field(), a.n(), words)
    }
}
