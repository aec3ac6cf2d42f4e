//! `F_q`-linear polynomials in `s, t_1, …, t_n` and their truncated series.
//!
//! A monomial `s^{q^m} t_1^{q^{k_1}} … t_n^{q^{k_n}}` is stored as
//! `(m, [k_1, …, k_n])`; coefficients live in the perfect closure.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::perfect::{bracket, PerfectRational, RationalJson};

/// Exponent data `(m, k_1..k_n)` of `s^{q^m} t_1^{q^{k_1}} … t_n^{q^{k_n}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinMonomial {
    pub m: u32,
    pub ks: Vec<u32>,
}

impl LinMonomial {
    pub fn new(m: u32, ks: Vec<u32>) -> Self {
        LinMonomial { m, ks }
    }

    /// `m ≤ min k_j` (vacuous when `n = 0`).
    pub fn in_f_shape(&self) -> bool {
        self.ks.iter().all(|&k| self.m <= k)
    }

    pub fn max_k(&self) -> u32 {
        self.ks.iter().copied().max().unwrap_or(0)
    }

    pub fn within(&self, window: u32) -> bool {
        self.ks.iter().all(|&k| k <= window)
    }
}

impl fmt::Display for LinMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s^(q^{})", self.m)?;
        for (j, k) in self.ks.iter().enumerate() {
            write!(f, "*t{}^(q^{})", j + 1, k)?;
        }
        Ok(())
    }
}

/// A finite `F_q`-linear polynomial with coefficients in the perfect closure.
#[derive(Clone, PartialEq, Eq)]
pub struct LinFun {
    field: Fq,
    n: usize,
    terms: BTreeMap<LinMonomial, PerfectRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinFunJson {
    pub n: usize,
    pub terms: Vec<(Vec<u32>, RationalJson)>,
}

impl LinFun {
    pub fn zero(field: &Fq, n: usize) -> Self {
        LinFun { field: field.clone(), n, terms: BTreeMap::new() }
    }

    pub fn monomial(field: &Fq, mono: LinMonomial, c: PerfectRational) -> Self {
        let n = mono.ks.len();
        let mut f = Self::zero(field, n);
        f.add_term(mono, c);
        f
    }

    /// `s` (for `n = 0`) or `s t_1 … t_n`.
    pub fn s(field: &Fq, n: usize) -> Self {
        Self::monomial(field, LinMonomial::new(0, vec![0; n]), PerfectRational::one(field))
    }

    pub fn from_terms<I>(field: &Fq, n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (LinMonomial, PerfectRational)>,
    {
        let mut f = Self::zero(field, n);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    /// Adds `c·mono` in place.
    pub fn add_term(&mut self, mono: LinMonomial, c: PerfectRational) {
        assert_eq!(mono.ks.len(), self.n, "monomial arity");
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
    pub fn terms(&self) -> &BTreeMap<LinMonomial, PerfectRational> {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &LinMonomial) -> PerfectRational {
        self.terms.get(mono).cloned().unwrap_or_else(|| PerfectRational::zero(&self.field))
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(format!("{:?}", self.field), format!("{:?}", o.field)));
        }
        if self.n != o.n {
            return Err(Error::ArityMismatch { expected: self.n, got: o.n });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o).unwrap();
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `λ·f`.
    pub fn scale(&self, lambda: &PerfectRational) -> Self {
        if lambda.is_zero() {
            return Self::zero(&self.field, self.n);
        }
        self.map_coeffs(|c| c.mul(lambda))
    }

    fn map_coeffs<F: Fn(&PerfectRational) -> PerfectRational>(&self, f: F) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let v = f(c);
                (!v.is_zero()).then(|| (m.clone(), v))
            })
            .collect();
        LinFun { terms, ..Self::zero(&self.field, self.n) }
    }

    pub fn in_f_shape(&self) -> bool {
        self.terms.keys().all(LinMonomial::in_f_shape)
    }

    /// Keeps the monomials with every `k_j ≤ window`.
    pub fn restrict(&self, window: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.within(window)).map(|(m, c)| (m.clone(), c.clone())).collect();
        LinFun { terms, ..Self::zero(&self.field, self.n) }
    }

    /// `τ`: `(a; m, ks) ↦ (a^q; m+1, ks+1)`.
    pub fn apply_tau(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(mo, c)| {
                let ks = mo.ks.iter().map(|k| k + 1).collect();
                (LinMonomial::new(mo.m + 1, ks), c.frobenius())
            })
            .collect();
        LinFun { terms, ..Self::zero(&self.field, self.n) }
    }

    /// `d_s`: `(a; m, ks) ↦ ((a·[m])^{1/q}; m−1, ks−1)`, killing `m = 0`.
    pub fn apply_ds(&self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (mo, c) in &self.terms {
            if mo.m == 0 {
                continue;
            }
            if mo.ks.contains(&0) {
                return Err(Error::MonomialEscape(mo.to_string()));
            }
            let ks = mo.ks.iter().map(|k| k - 1).collect();
            let v = c.mul(&bracket(&self.field, mo.m)).qth_root();
            terms.insert(LinMonomial::new(mo.m - 1, ks), v);
        }
        Ok(LinFun { terms, ..Self::zero(&self.field, self.n) })
    }

    /// `Δ_j` (1-based `j`): multiplies the coefficient of each monomial by `[k_j]`.
    pub fn apply_delta(&self, j: usize) -> Result<Self> {
        if j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange { index: j, n: self.n });
        }
        let mut terms = BTreeMap::new();
        for (mo, c) in &self.terms {
            let k = mo.ks[j - 1];
            if k == 0 {
                continue;
            }
            terms.insert(mo.clone(), c.mul(&bracket(&self.field, k)));
        }
        Ok(LinFun { terms, ..Self::zero(&self.field, self.n) })
    }

    /// `Σ a_m · value^{q^m}` for `n = 0`.
    pub fn evaluate(&self, value: &PerfectRational) -> Result<PerfectRational> {
        if self.n != 0 {
            return Err(Error::ArityMismatch { expected: 0, got: self.n });
        }
        let mut acc = PerfectRational::zero(&self.field);
        for (mo, c) in &self.terms {
            acc = acc.add(&c.mul(&value.q_power(mo.m as i64)));
        }
        Ok(acc)
    }

    /// Parses an `n = 0` polynomial such as `"s^(q^2) + x*s^q + (x + 1)*s"`.
    pub fn parse_in_s(field: &Fq, text: &str) -> Result<Self> {
        let mut out = LinFun::zero(field, 0);
        for raw in split_top_level(text) {
            let term = raw.trim();
            let (negate, term) = match term.strip_prefix('-') {
                Some(t) => (true, t.trim()),
                None => (false, term),
            };
            let at = term.rfind('s').ok_or_else(|| Error::Parse(format!("missing s in term {term:?}")))?;
            let power = term[at + 1..].replace(['(', ')', ' '], "");
            let m = match power.as_str() {
                "" => 0,
                "^q" => 1,
                p => p
                    .strip_prefix("^q^")
                    .and_then(|e| e.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad exponent {p:?}")))?,
            };
            let coeff_src = term[..at].trim().trim_end_matches('*').trim();
            let mut c = if coeff_src.is_empty() {
                PerfectRational::one(field)
            } else {
                PerfectRational::parse(field, coeff_src)?
            };
            if negate {
                c = c.neg();
            }
            out.add_term(LinMonomial::new(m, vec![]), c);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> LinFunJson {
        let terms = self
            .terms
            .iter()
            .map(|(mo, c)| {
                let mut key = vec![mo.m];
                key.extend(&mo.ks);
                (key, c.to_json())
            })
            .collect();
        LinFunJson { n: self.n, terms }
    }

    pub fn from_json(field: &Fq, j: &LinFunJson) -> Result<Self> {
        let mut f = Self::zero(field, j.n);
        for (key, c) in &j.terms {
            if key.len() != j.n + 1 {
                return Err(Error::ArityMismatch { expected: j.n + 1, got: key.len() });
            }
            f.add_term(LinMonomial::new(key[0], key[1..].to_vec()), PerfectRational::from_json(field, c)?);
        }
        Ok(f)
    }
}

impl fmt::Debug for LinFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LinFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A finite window onto an infinite series: exact for every monomial with
/// all `k_j ≤ order`, and equal to the true series for `k_j ≤ validity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub body: LinFun,
    pub order: u32,
    pub validity: u32,
}

/// Outcome of [`TruncatedSeries::compare`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesComparison {
    pub equal: bool,
    pub window: u32,
    pub witness: Option<LinMonomial>,
}

impl TruncatedSeries {
    pub fn new(body: LinFun, order: u32) -> Self {
        let body = body.restrict(order);
        TruncatedSeries { body, order, validity: order }
    }

    /// A finite function carried without truncation.
    pub fn exact(body: LinFun) -> Self {
        TruncatedSeries { body, order: u32::MAX, validity: u32::MAX }
    }

    pub fn is_exact(&self) -> bool {
        self.validity == u32::MAX
    }

    pub fn n(&self) -> usize {
        self.body.n()
    }

    pub fn field(&self) -> &Fq {
        self.body.field()
    }

    pub fn apply_tau(&self) -> Self {
        TruncatedSeries { body: self.body.apply_tau().restrict(self.order), ..self.clone() }
    }

    pub fn apply_ds(&self) -> Result<Self> {
        if self.validity == 0 && self.n() > 0 {
            return Err(Error::Precondition("d_s applied to a series with an empty validity window".into()));
        }
        Ok(TruncatedSeries { body: self.body.apply_ds()?, validity: if self.is_exact() { u32::MAX } else { self.validity.saturating_sub(1) }, ..self.clone() })
    }

    pub fn apply_delta(&self, j: usize) -> Result<Self> {
        Ok(TruncatedSeries { body: self.body.apply_delta(j)?, ..self.clone() })
    }

    pub fn scale(&self, c: &PerfectRational) -> Self {
        TruncatedSeries { body: self.body.scale(c), ..self.clone() }
    }

    /// Sum; the result is valid on the smaller window.
    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        TruncatedSeries {
            body: self.body.add(&o.body).restrict(order),
            order,
            validity: self.validity.min(o.validity),
        }
    }

    /// The part guaranteed to agree with the infinite series.
    pub fn valid_part(&self) -> LinFun {
        self.body.restrict(self.validity)
    }

    /// Coefficientwise comparison on the common validity window.
    pub fn compare(&self, o: &Self) -> SeriesComparison {
        let window = self.validity.min(o.validity);
        let a = self.body.restrict(window);
        let b = o.body.restrict(window);
        let witness = a
            .terms()
            .keys()
            .chain(b.terms().keys())
            .filter(|m| a.coeff(m) != b.coeff(m))
            .min()
            .cloned();
        SeriesComparison { equal: witness.is_none(), window, witness }
    }
}

/// Free-function form of [`TruncatedSeries::compare`].
pub fn series_compare(f: &TruncatedSeries, g: &TruncatedSeries) -> SeriesComparison {
    f.compare(g)
}

/// Splits on `+` and `-` signs outside parentheses, keeping each sign with its term.
fn split_top_level(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut prev = ' ';
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let splits = depth == 0 && (ch == '+' || (ch == '-' && prev != '^' && !cur.trim().is_empty()));
        if splits {
            parts.push(std::mem::take(&mut cur));
            if ch == '-' {
                cur.push('-');
            }
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = ch;
        }
    }
    parts.push(cur);
    parts.into_iter().filter(|p| !p.trim().is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqElem;
    use crate::perfect::QExp;

    fn f3() -> Fq {
        Fq::new(3, 1).unwrap()
    }

    fn mono(f: &Fq, m: u32, ks: &[u32]) -> LinFun {
        LinFun::monomial(f, LinMonomial::new(m, ks.to_vec()), PerfectRational::one(f))
    }

    #[test]
    fn tau_raises_everything() {
        let f = f3();
        let a = PerfectRational::x(&f);
        let g = LinFun::monomial(&f, LinMonomial::new(0, vec![0]), a.clone());
        let t = g.apply_tau();
        assert_eq!(t.coeff(&LinMonomial::new(1, vec![1])), a.frobenius());
        assert!(LinFun::zero(&f, 1).apply_tau().is_zero());
    }

    #[test]
    fn ds_examples() {
        let f = f3();
        let g = mono(&f, 2, &[3]).apply_ds().unwrap();
        assert_eq!(g.coeff(&LinMonomial::new(1, vec![2])), bracket(&f, 2).qth_root());
        assert_eq!(g.len(), 1);
        assert!(mono(&f, 0, &[4]).apply_ds().unwrap().is_zero());
        let h = mono(&f, 1, &[]).apply_ds().unwrap();
        assert_eq!(h.coeff(&LinMonomial::new(0, vec![])), bracket(&f, 1).qth_root());
        assert!(matches!(mono(&f, 1, &[0]).apply_ds(), Err(Error::MonomialEscape(_))));
    }

    #[test]
    fn delta_examples() {
        let f = f3();
        let g = mono(&f, 0, &[2]).apply_delta(1).unwrap();
        assert_eq!(g.coeff(&LinMonomial::new(0, vec![2])), bracket(&f, 2));
        assert!(mono(&f, 0, &[0]).apply_delta(1).unwrap().is_zero());
        assert_eq!(mono(&f, 0, &[0]).apply_delta(2), Err(Error::IndexOutOfRange { index: 2, n: 1 }));
    }

    #[test]
    fn evaluate_bracket() {
        let f = f3();
        let g = mono(&f, 1, &[]).sub(&mono(&f, 0, &[]));
        assert_eq!(g.evaluate(&PerfectRational::x(&f)).unwrap(), bracket(&f, 1));
        assert!(g.evaluate(&PerfectRational::zero(&f)).unwrap().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let f = Fq::new(2, 2).unwrap();
        let c = PerfectRational::monomial(&f, QExp::new(3, 2, 4), FqElem(2));
        let g = LinFun::monomial(&f, LinMonomial::new(1, vec![2, 3]), c).add(&mono(&f, 0, &[0, 5]));
        let s = serde_json::to_string(&g.to_json()).unwrap();
        let back: LinFunJson = serde_json::from_str(&s).unwrap();
        assert_eq!(LinFun::from_json(&f, &back).unwrap(), g);
    }

    #[test]
    fn compare_reports_witness() {
        let f = f3();
        let a = TruncatedSeries::new(mono(&f, 0, &[1]).add(&mono(&f, 0, &[2])), 4);
        let b = TruncatedSeries::new(mono(&f, 0, &[1]), 4);
        let r = a.compare(&b);
        assert!(!r.equal);
        assert_eq!(r.witness, Some(LinMonomial::new(0, vec![2])));
        assert!(a.compare(&a).equal);
    }

    #[test]
    fn parse_in_s_forms() {
        let f = Fq::new(2, 1).unwrap();
        let sq = LinFun::parse_in_s(&f, "s^q").unwrap();
        assert_eq!(sq, LinFun::monomial(&f, LinMonomial::new(1, vec![]), PerfectRational::one(&f)));
        let g = LinFun::parse_in_s(&f, "s^(q^2) + (x^(1) + 1)*s^q - s").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.coeff(&LinMonomial::new(1, vec![])), PerfectRational::parse(&f, "x^(1) + 1").unwrap());
        assert!(LinFun::parse_in_s(&f, "t^q").is_err());
    }
}
