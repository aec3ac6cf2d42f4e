//! Univariate polynomials over `F_q`, stored sparsely.
//!
//! Terms are kept in ascending exponent order with nonzero coefficients.
//! Multiplication, division and gcd switch to dense kernels (NTT products,
//! Newton inversion, in-place Euclid) when the operands are dense enough.

use std::cmp::Ordering;

use crate::field::{Fq, FqElem};
use crate::ntt;

/// Polynomial in one variable over `F_q`; the field is passed to each operation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: Vec<(u64, FqElem)>,
}

const DENSE_LIMIT: u64 = 1 << 25;

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(FqElem::ONE)
    }

    pub fn constant(c: FqElem) -> Poly {
        Poly::monomial(0, c)
    }

    pub fn monomial(e: u64, c: FqElem) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(e, c)] }
        }
    }

    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(mut terms: Vec<(u64, FqElem)>, f: &Fq) -> Poly {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(u64, FqElem)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = f.add(last.1, c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Poly { terms: out }
    }

    /// Trusted constructor: ascending, distinct, nonzero.
    pub fn from_dense(coeffs: &[FqElem]) -> Poly {
        Poly::from_dense_offset(coeffs, 0)
    }

    fn from_dense_offset(coeffs: &[FqElem], offset: u64) -> Poly {
        Poly {
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, &c)| (i as u64 + offset, c))
                .collect(),
        }
    }

    /// Dense coefficients from exponent `0` to the degree.
    pub fn to_dense(&self) -> Vec<FqElem> {
        self.to_dense_from(0)
    }

    fn to_dense_from(&self, lo: u64) -> Vec<FqElem> {
        let Some(d) = self.degree() else { return Vec::new() };
        let mut v = vec![FqElem::ZERO; (d - lo + 1) as usize];
        for &(e, c) in &self.terms {
            v[(e - lo) as usize] = c;
        }
        v
    }

    pub fn terms(&self) -> &[(u64, FqElem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (0, FqElem::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    /// Lowest exponent present.
    pub fn ord(&self) -> Option<u64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn lead(&self) -> FqElem {
        self.terms.last().map(|t| t.1).unwrap_or(FqElem::ZERO)
    }

    pub fn coeff(&self, e: u64) -> FqElem {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => FqElem::ZERO,
        }
    }

    pub fn add(&self, o: &Poly, f: &Fq) -> Poly {
        self.merge(o, f, false)
    }

    pub fn sub(&self, o: &Poly, f: &Fq) -> Poly {
        self.merge(o, f, true)
    }

    fn merge(&self, o: &Poly, f: &Fq, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &o.terms;
        let nb = |c: FqElem| if negate { f.neg(c) } else { c };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, nb(b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(a[i].1, nb(b[j].1));
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(e, c)| (e, nb(c))));
        Poly { terms: out }
    }

    pub fn neg(&self, f: &Fq) -> Poly {
        Poly { terms: self.terms.iter().map(|&(e, c)| (e, f.neg(c))).collect() }
    }

    pub fn scale(&self, c: FqElem, f: &Fq) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c == FqElem::ONE {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|&(e, a)| (e, f.mul(a, c))).collect() }
    }

    /// Multiplies by `y^s`.
    pub fn shift(&self, s: u64) -> Poly {
        Poly { terms: self.terms.iter().map(|&(e, c)| (e + s, c)).collect() }
    }

    /// Divides by `y^s`; every exponent must be at least `s`.
    pub fn unshift(&self, s: u64) -> Poly {
        Poly { terms: self.terms.iter().map(|&(e, c)| (e - s, c)).collect() }
    }

    /// Substitutes `y -> y^k`.
    pub fn expand(&self, k: u64) -> Poly {
        if k == 1 {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|&(e, c)| (e.checked_mul(k).expect("exponent overflow"), c))
                .collect(),
        }
    }

    /// Inverse of [`Poly::expand`], if every exponent is divisible by `k`.
    pub fn contract(&self, k: u64) -> Option<Poly> {
        if self.terms.iter().all(|t| t.0 % k == 0) {
            Some(Poly { terms: self.terms.iter().map(|&(e, c)| (e / k, c)).collect() })
        } else {
            None
        }
    }

    /// Gcd of all exponents (`0` for the zero polynomial or a constant).
    pub fn exponent_gcd(&self) -> u64 {
        self.terms.iter().fold(0u64, |g, t| gcd_u64(g, t.0))
    }

    /// `self^{p^k}` termwise: exponents times `p^k`, coefficients to the `p^k`.
    pub fn frobenius_p(&self, k: u32, f: &Fq) -> Poly {
        let pk = (f.p() as u64).pow(k);
        Poly {
            terms: self
                .terms
                .iter()
                .map(|&(e, c)| (e.checked_mul(pk).expect("exponent overflow"), f.pow(c, pk)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u64, f: &Fq) -> Poly {
        if e == 0 {
            return Poly::one();
        }
        if self.is_monomial() {
            let (x, c) = self.terms[0];
            return Poly::monomial(x.checked_mul(e).expect("exponent overflow"), f.pow(c, e));
        }
        // Split e in base p; p-th powers are additive.
        let p = f.p() as u64;
        let mut result = Poly::one();
        let mut rest = e;
        let mut k = 0u32;
        while rest > 0 {
            let d = rest % p;
            if d > 0 {
                let base = self.frobenius_p(k, f);
                let mut acc = base.clone();
                for _ in 1..d {
                    acc = acc.mul(&base, f);
                }
                result = result.mul(&acc, f);
            }
            rest /= p;
            k += 1;
        }
        result
    }

    pub fn mul(&self, o: &Poly, f: &Fq) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.len() == 1 {
            let (e, c) = self.terms[0];
            return o.scale(c, f).shift(e);
        }
        if o.len() == 1 {
            let (e, c) = o.terms[0];
            return self.scale(c, f).shift(e);
        }
        let lo = self.ord().unwrap() + o.ord().unwrap();
        let span = self.degree().unwrap() + o.degree().unwrap() - lo + 1;
        let work = self.len() as u64 * o.len() as u64;
        let dense_cost = span.saturating_mul(64 - span.leading_zeros() as u64 + 1) * 6;
        if work <= 64 || work <= dense_cost || span > DENSE_LIMIT {
            return self.mul_sparse(o, f, lo, span);
        }
        let a = self.to_dense_from(self.ord().unwrap());
        let b = o.to_dense_from(o.ord().unwrap());
        Poly::from_dense_offset(&dense_mul(&a, &b, f), lo)
    }

    fn mul_sparse(&self, o: &Poly, f: &Fq, lo: u64, span: u64) -> Poly {
        if span <= DENSE_LIMIT && span <= 16 * (self.len() as u64 * o.len() as u64) {
            if f.is_prime_field() {
                let p = f.p() as u64;
                let mut acc = vec![0u64; span as usize];
                for &(ea, ca) in &self.terms {
                    for &(eb, cb) in &o.terms {
                        acc[(ea + eb - lo) as usize] += ca.0 as u64 * cb.0 as u64;
                    }
                }
                return Poly {
                    terms: acc
                        .into_iter()
                        .enumerate()
                        .filter_map(|(i, v)| {
                            let c = (v % p) as u32;
                            (c != 0).then_some((i as u64 + lo, FqElem(c)))
                        })
                        .collect(),
                };
            }
            let mut acc = vec![FqElem::ZERO; span as usize];
            for &(ea, ca) in &self.terms {
                for &(eb, cb) in &o.terms {
                    let slot = &mut acc[(ea + eb - lo) as usize];
                    *slot = f.add(*slot, f.mul(ca, cb));
                }
            }
            return Poly::from_dense_offset(&acc, lo);
        }
        let mut prods = Vec::with_capacity(self.len() * o.len());
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &o.terms {
                prods.push((ea + eb, f.mul(ca, cb)));
            }
        }
        Poly::from_terms(prods, f)
    }

    /// Returns `(lead, self / lead)`.
    pub fn monic(&self, f: &Fq) -> (FqElem, Poly) {
        let l = self.lead();
        if l.is_zero() || l == FqElem::ONE {
            return (l, self.clone());
        }
        let inv = f.inv(l).unwrap();
        (l, self.scale(inv, f))
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &Poly, f: &Fq) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let (Some(da), Some(dd)) = (self.degree(), d.degree()) else {
            return (Poly::zero(), Poly::zero());
        };
        if da < dd {
            return (Poly::zero(), self.clone());
        }
        if d.len() == 1 {
            let (e, c) = d.terms[0];
            let inv = f.inv(c).unwrap();
            let mut q = Vec::new();
            let mut r = Vec::new();
            for &(x, a) in &self.terms {
                if x >= e {
                    q.push((x - e, f.mul(a, inv)));
                } else {
                    r.push((x, a));
                }
            }
            return (Poly { terms: q }, Poly { terms: r });
        }
        let qdeg = da - dd;
        if da > DENSE_LIMIT {
            return self.divrem_sparse(d, f);
        }
        let long_cost = (qdeg + 1).saturating_mul(d.len() as u64);
        let newton_cost = 2000 * (da + 1);
        if long_cost > newton_cost && d.len() as u64 > 64 {
            return self.divrem_newton(d, f);
        }
        let mut work = self.to_dense();
        let dterms: Vec<(u64, FqElem)> = d.terms[..d.len() - 1].to_vec();
        let linv = f.inv(d.lead()).unwrap();
        let mut q = vec![FqElem::ZERO; (qdeg + 1) as usize];
        if f.is_prime_field() {
            let p = f.p() as u64;
            let linv = linv.0 as u64;
            for i in (dd..=da).rev() {
                let c = work[i as usize].0 as u64;
                if c == 0 {
                    continue;
                }
                let qc = c * linv % p;
                q[(i - dd) as usize] = FqElem(qc as u32);
                let negq = p - qc;
                let base = i - dd;
                for &(e, b) in &dterms {
                    let slot = &mut work[(base + e) as usize].0;
                    *slot = ((*slot as u64 + negq * b.0 as u64) % p) as u32;
                }
                work[i as usize] = FqElem::ZERO;
            }
        } else {
            for i in (dd..=da).rev() {
                let c = work[i as usize];
                if c.is_zero() {
                    continue;
                }
                let qc = f.mul(c, linv);
                q[(i - dd) as usize] = qc;
                let negq = f.neg(qc);
                let base = i - dd;
                for &(e, b) in &dterms {
                    let slot = &mut work[(base + e) as usize];
                    *slot = f.add(*slot, f.mul(negq, b));
                }
                work[i as usize] = FqElem::ZERO;
            }
        }
        work.truncate(dd as usize);
        (Poly::from_dense(&q), Poly::from_dense(&work))
    }

    fn divrem_sparse(&self, d: &Poly, f: &Fq) -> (Poly, Poly) {
        use std::collections::BTreeMap;
        let dd = d.degree().unwrap();
        let linv = f.inv(d.lead()).unwrap();
        let mut rem: BTreeMap<u64, FqElem> = self.terms.iter().copied().collect();
        let mut q = Vec::new();
        while let Some((&top, &c)) = rem.iter().next_back() {
            if top < dd {
                break;
            }
            rem.remove(&top);
            let qc = f.mul(c, linv);
            q.push((top - dd, qc));
            for &(e, b) in &d.terms[..d.len() - 1] {
                let slot = rem.entry(top - dd + e).or_insert(FqElem::ZERO);
                *slot = f.sub(*slot, f.mul(qc, b));
                if slot.is_zero() {
                    rem.remove(&(top - dd + e));
                }
            }
        }
        q.reverse();
        (Poly { terms: q }, Poly { terms: rem.into_iter().collect() })
    }

    fn divrem_newton(&self, d: &Poly, f: &Fq) -> (Poly, Poly) {
        let da = self.degree().unwrap();
        let dd = d.degree().unwrap();
        let k = (da - dd + 1) as usize;
        let mut ra = self.to_dense();
        ra.reverse();
        let mut rb = d.to_dense();
        rb.reverse();
        let inv = series_inverse(&rb, k, f);
        ra.truncate(k);
        let mut qrev = dense_mul(&ra, &inv, f);
        qrev.resize(k, FqElem::ZERO);
        qrev.reverse();
        let q = Poly::from_dense(&qrev);
        let r = self.sub(&q.mul(d, f), f);
        (q, r)
    }

    pub fn rem(&self, d: &Poly, f: &Fq) -> Poly {
        self.divrem(d, f).1
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly, f: &Fq) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.degree() < d.degree() || self.ord() < d.ord() {
            return None;
        }
        let (q, r) = self.divrem(d, f);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly, f: &Fq) -> Poly {
        if a.is_zero() {
            return b.monic(f).1;
        }
        if b.is_zero() {
            return a.monic(f).1;
        }
        let o = a.ord().unwrap().min(b.ord().unwrap());
        let power = Poly::monomial(o, FqElem::ONE);
        let a = a.unshift(a.ord().unwrap());
        let b = b.unshift(b.ord().unwrap());
        if a.is_constant() || b.is_constant() {
            return power;
        }
        if a == b {
            return a.monic(f).1.shift(o);
        }
        let g = gcd_u64(a.exponent_gcd(), b.exponent_gcd());
        if g > 1 {
            let inner = Poly::gcd_core(&a.contract(g).unwrap(), &b.contract(g).unwrap(), f);
            return inner.expand(g).shift(o);
        }
        Poly::gcd_core(&a, &b, f).shift(o)
    }

    fn gcd_core(a: &Poly, b: &Poly, f: &Fq) -> Poly {
        let (x, y) = if a.degree() >= b.degree() { (a, b) } else { (b, a) };
        // The first reduction uses the sparse-aware division; the rest run dense.
        let r = x.rem(y, f);
        if r.is_zero() {
            return y.monic(f).1;
        }
        if r.is_constant() {
            return Poly::one();
        }
        if y.degree().unwrap() > DENSE_LIMIT {
            let mut x = y.clone();
            let mut y = r;
            loop {
                let r = x.rem(&y, f);
                if r.is_zero() {
                    return y.monic(f).1;
                }
                x = y;
                y = r;
            }
        }
        let g = dense_euclid(y.to_dense(), r.to_dense(), f);
        Poly::from_dense(&g)
    }
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn trim(v: &mut Vec<FqElem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Monic gcd of two dense polynomials by in-place Euclid.
fn dense_euclid(mut a: Vec<FqElem>, mut b: Vec<FqElem>, f: &Fq) -> Vec<FqElem> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let p = f.p() as u64;
    while !b.is_empty() {
        // a <- a mod b
        let db = b.len() - 1;
        let linv = f.inv(b[db]).unwrap();
        while a.len() > db {
            let top = a.len() - 1;
            let c = a[top];
            if !c.is_zero() {
                let shift = top - db;
                if f.is_prime_field() {
                    let qc = (c.0 as u64 * linv.0 as u64) % p;
                    let negq = p - qc;
                    for (i, &bi) in b.iter().enumerate() {
                        let slot = &mut a[shift + i].0;
                        *slot = ((*slot as u64 + negq * bi.0 as u64) % p) as u32;
                    }
                } else {
                    let negq = f.neg(f.mul(c, linv));
                    for (i, &bi) in b.iter().enumerate() {
                        let slot = &mut a[shift + i];
                        *slot = f.add(*slot, f.mul(negq, bi));
                    }
                }
            }
            a.pop();
        }
        trim(&mut a);
        std::mem::swap(&mut a, &mut b);
    }
    let inv = f.inv(*a.last().unwrap()).unwrap();
    a.iter().map(|&c| f.mul(c, inv)).collect()
}

/// Product of dense coefficient vectors, schoolbook or NTT by size.
pub(crate) fn dense_mul(a: &[FqElem], b: &[FqElem], f: &Fq) -> Vec<FqElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= 48 {
        let mut out = vec![FqElem::ZERO; n];
        if f.is_prime_field() {
            let p = f.p() as u64;
            let mut acc = vec![0u64; n];
            for (i, &x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    acc[i + j] += x.0 as u64 * y.0 as u64;
                }
            }
            for (o, v) in out.iter_mut().zip(acc) {
                *o = FqElem((v % p) as u32);
            }
        } else {
            for (i, &x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] = f.add(out[i + j], f.mul(x, y));
                }
            }
        }
        return out;
    }
    if f.is_prime_field() {
        let p = f.p() as u64;
        let ai: Vec<u64> = a.iter().map(|c| c.0 as u64).collect();
        let bi: Vec<u64> = b.iter().map(|c| c.0 as u64).collect();
        return ntt::convolve(&ai, &bi).into_iter().map(|v| FqElem((v % p) as u32)).collect();
    }
    // Kronecker substitution of the F_p-coordinates.
    let nu = f.nu() as usize;
    let stride = 2 * nu - 1;
    let spread = |v: &[FqElem]| -> Vec<u64> {
        let mut out = vec![0u64; v.len() * stride];
        for (i, &c) in v.iter().enumerate() {
            for (j, d) in f.digits(c).into_iter().enumerate() {
                out[i * stride + j] = d as u64;
            }
        }
        out
    };
    let conv = ntt::convolve(&spread(a), &spread(b));
    let mut out = Vec::with_capacity(n);
    let mut wide = vec![0u64; stride];
    for i in 0..n {
        for (c, w) in wide.iter_mut().enumerate() {
            *w = conv.get(i * stride + c).copied().unwrap_or(0);
        }
        out.push(f.reduce_wide(&mut wide));
    }
    out
}

/// Inverse of a power series with nonzero constant term, modulo `y^k`.
fn series_inverse(h: &[FqElem], k: usize, f: &Fq) -> Vec<FqElem> {
    let mut g = vec![f.inv(h[0]).expect("unit constant term")];
    let mut prec = 1usize;
    while prec < k {
        prec = (2 * prec).min(k);
        let hs = &h[..h.len().min(prec)];
        let mut hg = dense_mul(hs, &g, f);
        hg.resize(prec, FqElem::ZERO);
        // 2 - h g
        for c in hg.iter_mut() {
            *c = f.neg(*c);
        }
        hg[0] = f.add(hg[0], f.from_int(2));
        let mut next = dense_mul(&g, &hg, f);
        next.resize(prec, FqElem::ZERO);
        g = next;
    }
    g.truncate(k);
    g
}
