//! The perfect closure of `F_q(x)`.
//!
//! A value at level `e` is a ratio of polynomials in `y = x^{1/q^e}`. The
//! canonical form uses the least level at which the value is representable,
//! a numerator and denominator without common factor, and a monic
//! denominator, so structural equality is field equality.
//!
//! Since every coefficient lies in `F_q`, raising to the `q`-th power only
//! relabels `y^q` as the variable of the previous level, and the `q`-th root
//! is the inverse relabelling.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::poly::Poly;

/// A rational exponent `num / q^level`, normalized so that `q ∤ num` when `level > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QExp {
    num: i64,
    level: u32,
    q: u32,
}

impl QExp {
    pub fn new(num: i64, level: u32, q: u32) -> QExp {
        let mut e = QExp { num, level, q };
        e.normalize();
        e
    }

    pub fn integer(num: i64, q: u32) -> QExp {
        QExp { num, level: 0, q }
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.level = 0;
            return;
        }
        while self.level > 0 && self.num % self.q as i64 == 0 {
            self.num /= self.q as i64;
            self.level -= 1;
        }
    }

    pub fn num(&self) -> i64 {
        self.num
    }
    pub fn level(&self) -> u32 {
        self.level
    }
    pub fn q(&self) -> u32 {
        self.q
    }

    /// `q^level` as an integer.
    pub fn denominator(&self) -> u64 {
        (self.q as u64).pow(self.level)
    }

    fn at_level(&self, l: u32) -> i128 {
        self.num as i128 * (self.q as i128).pow(l - self.level)
    }

    pub fn add(&self, o: &QExp) -> QExp {
        let l = self.level.max(o.level);
        QExp::new((self.at_level(l) + o.at_level(l)) as i64, l, self.q)
    }

    pub fn sub(&self, o: &QExp) -> QExp {
        self.add(&QExp { num: -o.num, ..*o })
    }

    pub fn times_q(&self) -> QExp {
        if self.level > 0 {
            QExp { level: self.level - 1, ..*self }
        } else {
            QExp { num: self.num * self.q as i64, ..*self }
        }
    }

    pub fn div_q(&self) -> QExp {
        QExp::new(self.num, self.level + 1, self.q)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.denominator() as f64
    }
}

impl PartialOrd for QExp {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for QExp {
    fn cmp(&self, o: &Self) -> Ordering {
        let l = self.level.max(o.level);
        self.at_level(l).cmp(&o.at_level(l))
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

fn qpow(q: u32, k: u32) -> u64 {
    (q as u64).checked_pow(k).expect("exponent overflow")
}

/// Largest `t <= cap` with `q^t` dividing `g` (`g = 0` means "divisible by anything").
fn q_adic_room(g: u64, q: u32, cap: u32) -> u32 {
    let mut t = 0;
    let mut g = g;
    while t < cap && (g == 0 || g.is_multiple_of(q as u64)) {
        if g != 0 {
            g /= q as u64;
        }
        t += 1;
    }
    t
}

/// A polynomial in `x` with exponents in `Z[1/q]`, `≥ 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PerfectPoly {
    field: Fq,
    level: u32,
    poly: Poly,
}

impl PerfectPoly {
    /// Builds from a polynomial in `y = x^{1/q^level}` and normalizes the level.
    pub fn new(field: &Fq, level: u32, poly: Poly) -> PerfectPoly {
        let room = q_adic_room(poly.exponent_gcd(), field.q(), level);
        let poly = if room > 0 { poly.contract(qpow(field.q(), room)).unwrap() } else { poly };
        PerfectPoly { field: field.clone(), level: level - room, poly }
    }

    /// Builds from `(exponent, coefficient)` pairs.
    pub fn from_terms(field: &Fq, terms: &[(QExp, FqElem)]) -> PerfectPoly {
        let level = terms.iter().map(|t| t.0.level()).max().unwrap_or(0);
        let raw = terms
            .iter()
            .map(|(e, c)| {
                assert!(e.num() >= 0, "negative exponent in a polynomial");
                (e.at_level(level) as u64, *c)
            })
            .collect();
        PerfectPoly::new(field, level, Poly::from_terms(raw, field))
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn level(&self) -> u32 {
        self.level
    }
    /// Underlying polynomial in `y = x^{1/q^level}`.
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> Vec<(QExp, FqElem)> {
        self.poly
            .terms()
            .iter()
            .map(|&(e, c)| (QExp::new(e as i64, self.level, self.field.q()), c))
            .collect()
    }

    pub fn frobenius(&self) -> PerfectPoly {
        if self.level > 0 {
            PerfectPoly { level: self.level - 1, ..self.clone() }
        } else {
            PerfectPoly { poly: self.poly.expand(self.field.q() as u64), ..self.clone() }
        }
    }

    pub fn qth_root(&self) -> PerfectPoly {
        PerfectPoly::new(&self.field, self.level + 1, self.poly.clone())
    }
}

impl fmt::Debug for PerfectPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PerfectPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&poly_text(&self.poly, self.level, self.field.q()))
    }
}

fn poly_text(p: &Poly, level: u32, q: u32) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = p
        .terms()
        .iter()
        .rev()
        .map(|&(e, c)| {
            if e == 0 {
                return c.0.to_string();
            }
            let ex = QExp::new(e as i64, level, q);
            let mono = format!("x^({ex})");
            if c == FqElem::ONE {
                mono
            } else {
                format!("{}*{mono}", c.0)
            }
        })
        .collect();
    parts.join(" + ")
}

/// An element of the perfect closure of `F_q(x)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PerfectRational {
    field: Fq,
    level: u32,
    num: Poly,
    den: Poly,
}

/// JSON mirror: exponent numerators are read at the stated level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub level: u32,
    pub num: Vec<(u64, u32)>,
    pub den: Vec<(u64, u32)>,
}

impl PerfectRational {
    pub fn zero(field: &Fq) -> Self {
        PerfectRational { field: field.clone(), level: 0, num: Poly::zero(), den: Poly::one() }
    }

    pub fn one(field: &Fq) -> Self {
        Self::constant(field, FqElem::ONE)
    }

    pub fn constant(field: &Fq, c: FqElem) -> Self {
        PerfectRational { field: field.clone(), level: 0, num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_int(field: &Fq, k: i64) -> Self {
        Self::constant(field, field.from_int(k))
    }

    /// The generator `x`.
    pub fn x(field: &Fq) -> Self {
        Self::monomial(field, QExp::integer(1, field.q()), FqElem::ONE)
    }

    /// `c · x^e`.
    pub fn monomial(field: &Fq, e: QExp, c: FqElem) -> Self {
        assert!(e.num() >= 0, "negative exponent; use division");
        Self::from_poly(&PerfectPoly::new(field, e.level(), Poly::monomial(e.num() as u64, c)))
    }

    pub fn from_poly(p: &PerfectPoly) -> Self {
        PerfectRational { field: p.field.clone(), level: p.level, num: p.poly.clone(), den: Poly::one() }
    }

    /// Ordinary polynomial in `x` with the given ascending coefficients.
    pub fn from_coeffs(field: &Fq, coeffs: &[FqElem]) -> Self {
        Self::from_poly(&PerfectPoly::new(field, 0, Poly::from_dense(coeffs)))
    }

    /// Canonicalizes `num / den` with both read at `level`.
    pub fn from_parts(field: &Fq, level: u32, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(field));
        }
        let g = Poly::gcd(&num, &den, field);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g, field).unwrap(), den.exact_div(&g, field).unwrap())
        };
        Ok(Self::finish(field, level, num, den))
    }

    /// Coprime parts; normalizes the denominator to monic and the level to minimal.
    fn finish(field: &Fq, level: u32, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero(field);
        }
        let (lead, den) = den.monic(field);
        let num = if lead == FqElem::ONE { num } else { num.scale(field.inv(lead).unwrap(), field) };
        let g = crate::poly::gcd_u64(num.exponent_gcd(), den.exponent_gcd());
        let room = q_adic_room(g, field.q(), level);
        if room == 0 {
            return PerfectRational { field: field.clone(), level, num, den };
        }
        let k = qpow(field.q(), room);
        PerfectRational {
            field: field.clone(),
            level: level - room,
            num: num.contract(k).unwrap(),
            den: den.contract(k).unwrap(),
        }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn level(&self) -> u32 {
        self.level
    }
    /// Numerator as a polynomial in `y = x^{1/q^level}`.
    pub fn num_poly(&self) -> &Poly {
        &self.num
    }
    pub fn den_poly(&self) -> &Poly {
        &self.den
    }
    pub fn num(&self) -> PerfectPoly {
        PerfectPoly::new(&self.field, self.level, self.num.clone())
    }
    pub fn den(&self) -> PerfectPoly {
        PerfectPoly::new(&self.field, self.level, self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value as an element of `F_q`, if it is constant.
    pub fn as_constant(&self) -> Option<FqElem> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    fn check_field(&self, o: &Self) {
        assert!(self.field == o.field, "mixing elements of {:?} and {:?}", self.field, o.field);
    }

    /// Numerator and denominator lifted to level `l ≥ self.level`.
    pub(crate) fn parts_at(&self, l: u32) -> (Poly, Poly) {
        debug_assert!(l >= self.level);
        let k = qpow(self.field.q(), l - self.level);
        (self.num.expand(k), self.den.expand(k))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_field(o);
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let f = &self.field;
        let l = self.level.max(o.level);
        let (a, b) = self.parts_at(l);
        let (c, d) = o.parts_at(l);
        if b.is_one() && d.is_one() {
            return Self::finish(f, l, a.add(&c, f), b);
        }
        if b == d {
            let n = a.add(&c, f);
            return Self::from_parts(f, l, n, b).unwrap();
        }
        if b.is_one() {
            return Self::finish(f, l, a.mul(&d, f).add(&c, f), d);
        }
        if d.is_one() {
            return Self::finish(f, l, c.mul(&b, f).add(&a, f), b);
        }
        let g = Poly::gcd(&b, &d, f);
        if g.is_one() {
            let n = a.mul(&d, f).add(&c.mul(&b, f), f);
            return Self::finish(f, l, n, b.mul(&d, f));
        }
        let b1 = b.exact_div(&g, f).unwrap();
        let d1 = d.exact_div(&g, f).unwrap();
        let n = a.mul(&d1, f).add(&c.mul(&b1, f), f);
        let g2 = Poly::gcd(&n, &g, f);
        if g2.is_one() {
            Self::finish(f, l, n, b1.mul(&d, f))
        } else {
            let n = n.exact_div(&g2, f).unwrap();
            let den = b1.mul(&d, f).exact_div(&g2, f).unwrap();
            Self::finish(f, l, n, den)
        }
    }

    pub fn neg(&self) -> Self {
        PerfectRational { num: self.num.neg(&self.field), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_field(o);
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let l = self.level.max(o.level);
        let (a, b) = self.parts_at(l);
        let (c, d) = o.parts_at(l);
        let (a, d) = cancel(a, d, f);
        let (c, b) = cancel(c, b, f);
        Self::finish(f, l, a.mul(&c, f), b.mul(&d, f))
    }

    pub fn scale(&self, c: FqElem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        PerfectRational { num: self.num.scale(c, &self.field), ..self.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::finish(&self.field, self.level, self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u64) -> Self {
        let f = &self.field;
        Self::finish(f, self.level, self.num.pow(e, f), self.den.pow(e, f))
    }

    /// `a^{-e}`.
    pub fn pow_neg(&self, e: u64) -> Result<Self> {
        self.inv().map(|a| a.pow(e))
    }

    /// `a^q`.
    pub fn frobenius(&self) -> Self {
        self.q_power(1)
    }

    /// `a^{1/q}`.
    pub fn qth_root(&self) -> Self {
        self.q_power(-1)
    }

    /// `a^{q^k}` for any integer `k`.
    pub fn q_power(&self, k: i64) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let q = self.field.q();
        if k > 0 {
            let k = k as u32;
            if k <= self.level {
                PerfectRational { level: self.level - k, ..self.clone() }
            } else {
                let m = qpow(q, k - self.level);
                PerfectRational { level: 0, num: self.num.expand(m), den: self.den.expand(m), ..self.clone() }
            }
        } else {
            let k = (-k) as u32;
            let g = crate::poly::gcd_u64(self.num.exponent_gcd(), self.den.exponent_gcd());
            let room = q_adic_room(g, q, k);
            let m = qpow(q, room);
            PerfectRational {
                level: self.level + (k - room),
                num: self.num.contract(m).unwrap(),
                den: self.den.contract(m).unwrap(),
                ..self.clone()
            }
        }
    }

    /// Re-canonicalizes from the stored parts (idempotent on canonical values).
    pub fn canonicalize(&self) -> Self {
        Self::from_parts(&self.field, self.level, self.num.clone(), self.den.clone()).unwrap()
    }

    pub fn to_json(&self) -> RationalJson {
        let conv = |p: &Poly| p.terms().iter().rev().map(|&(e, c)| (e, c.0)).collect();
        RationalJson { level: self.level, num: conv(&self.num), den: conv(&self.den) }
    }

    pub fn from_json(field: &Fq, j: &RationalJson) -> Result<Self> {
        let conv = |v: &[(u64, u32)]| -> Result<Poly> {
            let terms = v
                .iter()
                .map(|&(e, c)| field.from_index(c).map(|c| (e, c)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Poly::from_terms(terms, field))
        };
        Self::from_parts(field, j.level, conv(&j.num)?, conv(&j.den)?)
    }

    /// Parses the canonical text form (`"x^(3) + 2*x^(1)"`, `"(num)/(den)"`).
    pub fn parse(field: &Fq, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('(') {
            let close = matching_paren(rest)
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
            let num = parse_poly(field, &rest[..close])?;
            let tail = rest[close + 1..].trim();
            if tail.is_empty() {
                return Ok(Self::from_poly(&num));
            }
            let den_src = tail
                .strip_prefix('/')
                .map(str::trim)
                .and_then(|t| t.strip_prefix('('))
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("expected /(den) in {s:?}")))?;
            let den = parse_poly(field, den_src)?;
            return Self::from_poly(&num).div(&Self::from_poly(&den));
        }
        Ok(Self::from_poly(&parse_poly(field, s)?))
    }

    /// Uniformly random polynomial of `x`-degree at most `deg`, at `level`.
    pub fn random_poly<R: Rng>(field: &Fq, rng: &mut R, deg: u64, level: u32) -> Self {
        let coeffs: Vec<FqElem> = (0..=deg).map(|_| FqElem(rng.gen_range(0..field.q()))).collect();
        let p = PerfectPoly::new(field, level, Poly::from_dense(&coeffs));
        Self::from_poly(&p)
    }

    /// Random ratio of random polynomials (nonzero denominator).
    pub fn random_rational<R: Rng>(field: &Fq, rng: &mut R, deg: u64, level: u32) -> Self {
        let n = Self::random_poly(field, rng, deg, level);
        loop {
            let d = Self::random_poly(field, rng, deg, level);
            if !d.is_zero() {
                return n.div(&d).unwrap();
            }
        }
    }
}

/// `[i] = x^{q^i} - x`, with `[0] = 0`.
pub fn bracket(field: &Fq, i: u32) -> PerfectRational {
    if i == 0 {
        return PerfectRational::zero(field);
    }
    let qi = qpow(field.q(), i);
    let p = Poly::from_terms(vec![(qi, FqElem::ONE), (1, field.neg(FqElem::ONE))], field);
    PerfectRational::from_poly(&PerfectPoly::new(field, 0, p))
}

/// Removes the gcd of `a` and `b`; `b` is monic or one.
fn cancel(a: Poly, b: Poly, f: &Fq) -> (Poly, Poly) {
    if b.is_one() || a.is_constant() {
        return (a, b);
    }
    let g = Poly::gcd(&a, &b, f);
    if g.is_one() {
        (a, b)
    } else {
        (a.exact_div(&g, f).unwrap(), b.exact_div(&g, f).unwrap())
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' if depth == 0 => return Some(i),
            ')' => depth -= 1,
            _ => {}
        }
    }
    None
}

fn parse_poly(field: &Fq, s: &str) -> Result<PerfectPoly> {
    let q = field.q();
    let s = s.trim();
    if s == "0" {
        return Ok(PerfectPoly::new(field, 0, Poly::zero()));
    }
    let mut terms = Vec::new();
    for raw in s.split('+') {
        let t: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse(format!("empty term in {s:?}")));
        }
        let (coeff, mono) = match t.find("x^(") {
            None => (t.as_str(), None),
            Some(0) => ("1", Some(&t[3..])),
            Some(i) => {
                let c = t[..i]
                    .strip_suffix('*')
                    .ok_or_else(|| Error::Parse(format!("expected '*' in term {t:?}")))?;
                (c, Some(&t[i + 3..]))
            }
        };
        let c: u32 = coeff.parse().map_err(|_| Error::Parse(format!("bad coefficient {coeff:?}")))?;
        let c = field.from_index(c)?;
        let e = match mono {
            None => QExp::integer(0, q),
            Some(m) => {
                let m = m.strip_suffix(')').ok_or_else(|| Error::Parse(format!("missing ')' in {t:?}")))?;
                let (n, d) = match m.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (m, None),
                };
                let n: i64 = n.parse().map_err(|_| Error::Parse(format!("bad exponent {m:?}")))?;
                if n < 0 {
                    return Err(Error::Parse(format!("negative exponent {m:?}")));
                }
                let level = match d {
                    None => 0,
                    Some(d) => {
                        let d: u64 = d.parse().map_err(|_| Error::Parse(format!("bad exponent {m:?}")))?;
                        let mut level = 0;
                        let mut acc = 1u64;
                        while acc < d {
                            acc *= q as u64;
                            level += 1;
                        }
                        if acc != d {
                            return Err(Error::Parse(format!("{d} is not a power of {q}")));
                        }
                        level
                    }
                };
                QExp::new(n, level, q)
            }
        };
        terms.push((e, c));
    }
    Ok(PerfectPoly::from_terms(field, &terms))
}

impl fmt::Debug for PerfectRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PerfectRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.field.q();
        if self.den.is_one() {
            f.write_str(&poly_text(&self.num, self.level, q))
        } else {
            write!(f, "({})/({})", poly_text(&self.num, self.level, q), poly_text(&self.den, self.level, q))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Fq {
        Fq::new(2, 1).unwrap()
    }

    #[test]
    fn frobenius_of_x() {
        for (p, nu) in [(2, 1), (3, 1), (2, 2)] {
            let f = Fq::new(p, nu).unwrap();
            let x = PerfectRational::x(&f);
            let xq = PerfectRational::monomial(&f, QExp::integer(f.q() as i64, f.q()), FqElem::ONE);
            assert_eq!(x.frobenius(), xq);
        }
    }

    #[test]
    fn qth_root_of_x() {
        let f = Fq::new(3, 1).unwrap();
        let r = PerfectRational::x(&f).qth_root();
        assert_eq!(r.level(), 1);
        assert_eq!(r.num().terms(), vec![(QExp::new(1, 1, 3), FqElem::ONE)]);
        assert_eq!(r.to_string(), "x^(1/3)");
    }

    #[test]
    fn qth_root_in_char_two() {
        // (x + x^{1/2})^2 = x^2 + x
        let f = f2();
        let a = PerfectRational::parse(&f, "x^(2) + x^(1)").unwrap();
        let expect = PerfectRational::parse(&f, "x^(1) + x^(1/2)").unwrap();
        assert_eq!(a.qth_root(), expect);
        assert_eq!(expect.mul(&expect), a);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = f2();
        let x = PerfectRational::x(&f);
        assert_eq!(x.div(&PerfectRational::zero(&f)), Err(Error::DivisionByZero));
        assert_eq!(PerfectRational::zero(&f).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_form_cancels_and_lowers_level() {
        let f = Fq::new(3, 1).unwrap();
        // (y^6 - y^3) / (y^3) at level 1 = x^{1} - 1 ... in y = x^{1/3}: y^6 = x^2
        let num = Poly::from_terms(vec![(6, FqElem(1)), (3, FqElem(2))], &f);
        let den = Poly::monomial(3, FqElem(1));
        let r = PerfectRational::from_parts(&f, 1, num, den).unwrap();
        assert_eq!(r.level(), 0);
        assert_eq!(r.to_string(), "x^(1) + 2");
        // den made monic
        let r = PerfectRational::from_parts(&f, 0, Poly::one(), Poly::constant(FqElem(2))).unwrap();
        assert_eq!(r, PerfectRational::constant(&f, FqElem(2)));
    }

    #[test]
    fn text_round_trip_examples() {
        let f = Fq::new(3, 1).unwrap();
        let b = PerfectRational::parse(&f, "x^(3) + 2*x^(1)").unwrap();
        assert_eq!(b.to_string(), "x^(3) + 2*x^(1)");
        let r = PerfectRational::parse(&f, "(1)/(x^(4/3) + 2*x^(1/3))").unwrap();
        assert_eq!(r.to_string(), "(1)/(x^(4/3) + 2*x^(1/3))");
        assert_eq!(PerfectRational::parse(&f, "1").unwrap(), PerfectRational::one(&f));
        assert!(PerfectRational::parse(&f, "x^(1/2)").is_err());
        assert!(PerfectRational::parse(&f, "5").is_err());
    }

    #[test]
    fn json_round_trip_example() {
        let f = Fq::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = PerfectRational::random_rational(&f, &mut rng, 4, 2);
        let j = a.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: RationalJson = serde_json::from_str(&s).unwrap();
        assert_eq!(PerfectRational::from_json(&f, &back).unwrap(), a);
    }

    #[test]
    fn bracket_recursion() {
        for (p, nu) in [(2, 1), (3, 1), (2, 2)] {
            let f = Fq::new(p, nu).unwrap();
            assert!(bracket(&f, 0).is_zero());
            for k in 1..=8 {
                let lhs = bracket(&f, k);
                let rhs = bracket(&f, k - 1).frobenius().add(&bracket(&f, 1));
                assert_eq!(lhs, rhs);
            }
        }
        let f = f2();
        assert_eq!(bracket(&f, 1).to_string(), "x^(2) + x^(1)");
    }

    #[test]
    fn qexp_arithmetic() {
        let a = QExp::new(3, 1, 3);
        assert_eq!(a, QExp::integer(1, 3));
        let b = QExp::new(1, 1, 3);
        assert_eq!(b.add(&b).add(&b), QExp::integer(1, 3));
        assert!(b < a);
        assert_eq!(b.times_q(), a);
        assert_eq!(a.div_q(), b);
        assert_eq!(QExp::new(0, 5, 2).level(), 0);
    }

    #[test]
    fn q_power_mixed_signs() {
        let f = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = PerfectRational::random_rational(&f, &mut rng, 3, 1);
            if a.is_zero() {
                continue;
            }
            assert_eq!(a.q_power(3).q_power(-3), a);
            assert_eq!(a.q_power(-2).q_power(2), a);
            assert_eq!(a.q_power(2), a.frobenius().frobenius());
            assert_eq!(a.q_power(1), a.pow(2));
        }
    }
}
