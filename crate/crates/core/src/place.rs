//! Finite places of `F_q(x)` and the valuations they define on the perfect closure.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::perfect::{PerfectPoly, PerfectRational, QExp};
use crate::poly::Poly;

/// A monic irreducible `π ∈ F_q[x]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Place {
    field: Fq,
    pi: Poly,
}

/// `v_π` of an element: an exact rational with a `q`-power denominator, or `+∞` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(QExp),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<QExp> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinity => None,
        }
    }

    pub fn add(self, o: Valuation) -> Valuation {
        match (self, o) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a.add(&b)),
            _ => Valuation::Infinity,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        match self {
            Valuation::Finite(e) => e.num() >= 0,
            Valuation::Infinity => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Valuation {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(e) => write!(f, "{e}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

impl Place {
    /// Certifies `pi` as monic irreducible.
    pub fn new(field: &Fq, pi: Poly) -> Result<Place> {
        let d = pi.degree().unwrap_or(0);
        if d == 0 || pi.lead() != FqElem::ONE {
            return Err(Error::Precondition("a place needs a monic polynomial of degree ≥ 1".into()));
        }
        if !is_irreducible(&pi, field) {
            return Err(Error::Precondition(format!("{} is reducible", poly_str(&pi, field))));
        }
        Ok(Place { field: field.clone(), pi })
    }

    /// The place `x`.
    pub fn x(field: &Fq) -> Place {
        Place { field: field.clone(), pi: Poly::monomial(1, FqElem::ONE) }
    }

    pub fn pi(&self) -> PerfectPoly {
        PerfectPoly::new(&self.field, 0, self.pi.clone())
    }

    pub fn pi_poly(&self) -> &Poly {
        &self.pi
    }

    pub fn delta(&self) -> u64 {
        self.pi.degree().unwrap()
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    /// `v_π` of an ordinary polynomial.
    pub fn poly_valuation(&self, a: &Poly) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let f = &self.field;
        if self.pi.is_monomial() {
            return a.ord();
        }
        let da = a.degree().unwrap();
        let dp = self.delta();
        let p = f.p() as u64;
        // Divide greedily by π^{p^j}, which is as sparse as π.
        let mut powers = vec![(1u64, self.pi.clone())];
        while powers.last().unwrap().0.saturating_mul(p) * dp <= da {
            let (e, pp) = powers.last().unwrap();
            powers.push((e * p, pp.frobenius_p(1, f)));
        }
        let mut v = 0;
        let mut cur = a.clone();
        for (e, pp) in powers.iter().rev() {
            loop {
                let (qt, r) = cur.divrem(pp, f);
                if !r.is_zero() {
                    break;
                }
                cur = qt;
                v += e;
            }
        }
        Some(v)
    }

    pub fn valuation(&self, r: &PerfectRational) -> Valuation {
        if r.is_zero() {
            return Valuation::Infinity;
        }
        let vn = self.poly_valuation(r.num_poly()).unwrap() as i64;
        let vd = self.poly_valuation(r.den_poly()).unwrap() as i64;
        Valuation::Finite(QExp::new(vn - vd, r.level(), self.field.q()))
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&poly_str(&self.pi, &self.field))
    }
}

fn poly_str(p: &Poly, f: &Fq) -> String {
    PerfectPoly::new(f, 0, p.clone()).to_string()
}

/// `x^{q^k} mod m` by repeated `q`-th powering.
fn x_qpow_mod(k: u32, m: &Poly, f: &Fq) -> Poly {
    let q = f.q() as u64;
    let mut r = Poly::monomial(1, FqElem::ONE).rem(m, f);
    for _ in 0..k {
        r = r.pow(q, f).rem(m, f);
    }
    r
}

/// Gcd criterion: `π | x^{q^δ} − x` and `gcd(π, x^{q^{δ/r}} − x) = 1` for primes `r | δ`.
pub fn is_irreducible(pi: &Poly, f: &Fq) -> bool {
    let d = match pi.degree() {
        Some(d) if d >= 1 => d as u32,
        _ => return false,
    };
    let x = Poly::monomial(1, FqElem::ONE);
    if !x_qpow_mod(d, pi, f).sub(&x, f).rem(pi, f).is_zero() {
        return false;
    }
    (2..=d).filter(|r| d % r == 0 && crate::field::is_prime(*r)).all(|r| {
        let h = x_qpow_mod(d / r, pi, f).sub(&x, f);
        Poly::gcd(pi, &h, f).is_one()
    })
}

/// All monic irreducibles of degree `delta`, in lexicographic order of coefficients.
pub fn irreducibles(field: &Fq, delta: u32) -> Vec<Place> {
    assert!(delta >= 1);
    let q = field.q() as u64;
    let count = q.checked_pow(delta).expect("too many candidates");
    let mut out = Vec::new();
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(delta as usize + 1);
        let mut r = idx;
        for _ in 0..delta {
            coeffs.push(FqElem((r % q) as u32));
            r /= q;
        }
        coeffs.push(FqElem::ONE);
        let pi = Poly::from_dense(&coeffs);
        if is_irreducible(&pi, field) {
            out.push(Place { field: field.clone(), pi });
        }
    }
    out
}
