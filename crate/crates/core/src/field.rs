//! The finite field `F_q`, `q = p^nu`.
//!
//! Elements are stored as their index `sum_i d_i p^i`, where `d_i` is the
//! coordinate of `w^i` and `w` is a root of a fixed modulus. For each `(p, nu)`
//! the modulus is the Conway polynomial when it is in [`CONWAY`], otherwise the
//! lexicographically least monic irreducible of degree `nu`. Either way the
//! choice is deterministic, so serialized coefficients are stable.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Conway polynomials `(p, nu, coefficients low to high)`.
pub const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
];

/// Largest supported field size; log tables are built eagerly.
pub const MAX_Q: u64 = 1 << 16;

/// An element of `F_q`, meaningful only together with its [`Fq`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }
}

/// Public description of a field: characteristic, degree, modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldConfig {
    pub p: u32,
    pub nu: u32,
    pub q: u32,
    /// Monic modulus over `F_p`, coefficients low to high (`[0, 1]` when `nu = 1`).
    pub modulus: Vec<u32>,
}

struct Inner {
    cfg: FieldConfig,
    /// `exp[i] = g^i` for a primitive element `g`, `i < q - 1`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`.
    log: Vec<u32>,
    /// Dense addition table when `nu > 1` and `q <= 256`.
    add: Option<Vec<u16>>,
    neg: Vec<u32>,
}

/// Shared handle to a finite field. Cheap to clone; equality compares `(p, nu)`.
#[derive(Clone)]
pub struct Fq(Arc<Inner>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p() == other.p() && self.nu() == other.nu())
    }
}
impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        (self.p(), self.nu()).hash(h);
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (p={}, nu={})", self.q(), self.p(), self.nu())
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomial helpers over F_p used only while building tables.
fn fp_poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let inv_lead = fp_inv(m[dm], p);
    while r.len() > dm {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let c = (lead as u64 * inv_lead as u64 % p as u64) as u32;
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                let v = r[shift + i] as u64 + (p - 1) as u64 * ((c as u64 * mi as u64) % p as u64);
                r[shift + i] = (v % p as u64) as u32;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn fp_poly_is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                f.push((t % p as u64) as u32);
                t /= p as u64;
            }
            f.push(1);
            if fp_poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, nu: u32) -> Vec<u32> {
    let count = (p as u64).pow(nu);
    for idx in 0..count {
        let mut f = Vec::with_capacity(nu as usize + 1);
        let mut t = idx;
        for _ in 0..nu {
            f.push((t % p as u64) as u32);
            t /= p as u64;
        }
        f.push(1);
        if fp_poly_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl Fq {
    /// Builds `F_{p^nu}`.
    pub fn new(p: u32, nu: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if nu == 0 {
            return Err(Error::InvalidField("nu must be positive".into()));
        }
        let q = (p as u64)
            .checked_pow(nu)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| Error::InvalidField(format!("q = {p}^{nu} exceeds {MAX_Q}")))?;
        let q = q as u32;
        let modulus = if nu == 1 {
            vec![0, 1]
        } else if let Some((_, _, m)) = CONWAY.iter().find(|(pp, nn, _)| *pp == p && *nn == nu) {
            m.to_vec()
        } else {
            least_irreducible(p, nu)
        };
        let cfg = FieldConfig { p, nu, q, modulus };

        let digits = |a: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(nu as usize);
            let mut t = a;
            for _ in 0..nu {
                v.push(t % p);
                t /= p;
            }
            v
        };
        let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0u32, |acc, &x| acc * p + x) };
        let raw_mul = |a: u32, b: u32| -> u32 {
            if nu == 1 {
                return ((a as u64 * b as u64) % p as u64) as u32;
            }
            let da = digits(a);
            let db = digits(b);
            let mut prod = vec![0u32; 2 * nu as usize - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let mut r = fp_poly_rem(&prod, &cfg.modulus, p);
            r.resize(nu as usize, 0);
            undigits(&r)
        };

        // Primitive element by order test.
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let pow_raw = |g: u32, mut e: u64| -> u32 {
            let mut r = 1u32;
            let mut b = g;
            while e > 0 {
                if e & 1 == 1 {
                    r = raw_mul(r, b);
                }
                b = raw_mul(b, b);
                e >>= 1;
            }
            r
        };
        let g = (1..q)
            .find(|&g| factors.iter().all(|&r| pow_raw(g, order / r) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..(q - 1) {
            exp.push(cur);
            log[cur as usize] = i;
            cur = raw_mul(cur, g);
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| undigits(&digits(a).iter().map(|&d| (p - d) % p).collect::<Vec<_>>()))
            .collect();
        let add = if nu > 1 && q <= 256 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                let da = digits(a);
                for b in 0..q {
                    let db = digits(b);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = undigits(&s) as u16;
                }
            }
            Some(t)
        } else {
            None
        };
        Ok(Fq(Arc::new(Inner { cfg, exp, log, add, neg })))
    }

    pub fn config(&self) -> &FieldConfig {
        &self.0.cfg
    }
    #[inline]
    pub fn p(&self) -> u32 {
        self.0.cfg.p
    }
    #[inline]
    pub fn nu(&self) -> u32 {
        self.0.cfg.nu
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.0.cfg.q
    }
    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.cfg.nu == 1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> FqElem {
        let p = self.p() as i64;
        FqElem(k.rem_euclid(p) as u32)
    }

    /// Element with the given index, `idx < q`.
    pub fn from_index(&self, idx: u32) -> Result<FqElem> {
        if idx < self.q() {
            Ok(FqElem(idx))
        } else {
            Err(Error::Parse(format!("{idx} is not an element of F_{}", self.q())))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q()).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let inner = &*self.0;
        if inner.cfg.nu == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= inner.cfg.p { s - inner.cfg.p } else { s });
        }
        if let Some(t) = &inner.add {
            return FqElem(t[(a.0 * inner.cfg.q + b.0) as usize] as u32);
        }
        let p = inner.cfg.p;
        let (mut x, mut y, mut r, mut place) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..inner.cfg.nu {
            r += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FqElem(r)
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let inner = &*self.0;
        if inner.cfg.nu == 1 {
            return FqElem(((a.0 as u64 * b.0 as u64) % inner.cfg.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        let n = inner.cfg.q - 1;
        let s = inner.log[a.0 as usize] + inner.log[b.0 as usize];
        FqElem(inner.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        let inner = &*self.0;
        let n = inner.cfg.q - 1;
        let l = inner.log[a.0 as usize];
        Some(FqElem(inner.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        self.inv(b).map(|bi| self.mul(a, bi)).ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.is_zero() {
            return FqElem::ZERO;
        }
        let inner = &*self.0;
        let n = (inner.cfg.q - 1) as u64;
        let l = inner.log[a.0 as usize] as u64;
        FqElem(inner.exp[((l * (e % n)) % n) as usize])
    }

    /// Coordinates of `a` over `F_p` (coefficient of `w^i` at position `i`).
    pub fn digits(&self, a: FqElem) -> Vec<u32> {
        let p = self.p();
        let mut t = a.0;
        (0..self.nu())
            .map(|_| {
                let d = t % p;
                t /= p;
                d
            })
            .collect()
    }

    /// Inverse of [`Fq::digits`]; digits must be reduced mod `p`.
    pub fn from_digits(&self, d: &[u32]) -> FqElem {
        let p = self.p();
        FqElem(d.iter().rev().fold(0u32, |acc, &x| acc * p + x))
    }

    /// Multiplication of two `w`-polynomials with integer digits followed by
    /// reduction mod `(p, modulus)`. `prod` has length `2 nu - 1`.
    pub(crate) fn reduce_wide(&self, prod: &mut [u64]) -> FqElem {
        let p = self.p() as u64;
        let nu = self.nu() as usize;
        for v in prod.iter_mut() {
            *v %= p;
        }
        let m = &self.0.cfg.modulus;
        for top in (nu..prod.len()).rev() {
            let c = prod[top];
            if c != 0 {
                for i in 0..nu {
                    let sub = c * m[i] as u64 % p;
                    let idx = top - nu + i;
                    prod[idx] = (prod[idx] + p - sub) % p;
                }
                prod[top] = 0;
            }
        }
        let mut r = 0u32;
        for i in (0..nu).rev() {
            r = r * p as u32 + prod[i] as u32;
        }
        FqElem(r)
    }
}
