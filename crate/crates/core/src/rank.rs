//! Rank of a family of linear functions over the perfect closure.
//!
//! The exact route lifts every coefficient to a common level `e`, clears row
//! denominators, and runs fraction-free (Bareiss) elimination over `F_q[y]`,
//! `y = x^{1/q^e}`. The probabilistic route substitutes a random point of a
//! finite extension `F_q[y]/(P)` and eliminates there.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use serde::Serialize;

use crate::field::{Fq, FqElem};
use crate::linfun::{LinFun, LinMonomial};
use crate::place::is_irreducible;
use crate::poly::Poly;

/// Which elimination route to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RankMode {
    Exact,
    Probabilistic { trials: u32, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankResult {
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    /// Upper bound on the probability that the reported rank is too small.
    pub failure_bound: Option<f64>,
}

/// Polynomial matrix over `F_q[y]` (sparse rows), with the common level `e`.
pub struct PolyMatrix {
    pub field: Fq,
    pub level: u32,
    pub cols: usize,
    pub rows: Vec<BTreeMap<usize, Poly>>,
}

impl PolyMatrix {
    /// Lifts `vectors` (restricted to `window`, if any) to polynomial rows.
    pub fn from_vectors(field: &Fq, vectors: &[LinFun], window: Option<u32>) -> PolyMatrix {
        let restricted: Vec<LinFun> = vectors
            .iter()
            .map(|v| match window {
                Some(w) => v.restrict(w),
                None => v.clone(),
            })
            .filter(|v| !v.is_zero())
            .collect();
        let mut seen = HashSet::new();
        let unique: Vec<&LinFun> = restricted
            .iter()
            .filter(|v| seen.insert(v.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect::<Vec<_>>()))
            .collect();
        let mut cols: BTreeMap<LinMonomial, usize> = BTreeMap::new();
        for v in &unique {
            for m in v.terms().keys() {
                let len = cols.len();
                cols.entry(m.clone()).or_insert(len);
            }
        }
        let level = unique.iter().flat_map(|v| v.terms().values().map(|c| c.level())).max().unwrap_or(0);
        let rows = unique
            .iter()
            .map(|v| {
                let parts: Vec<(usize, Poly, Poly)> = v
                    .terms()
                    .iter()
                    .map(|(m, c)| {
                        let (n, d) = c.parts_at(level);
                        (cols[m], n, d)
                    })
                    .collect();
                let mut lcm = Poly::one();
                for (_, _, d) in &parts {
                    if d.is_one() || lcm.exact_div(d, field).is_some() {
                        continue;
                    }
                    let g = Poly::gcd(&lcm, d, field);
                    lcm = lcm.mul(&d.exact_div(&g, field).unwrap(), field);
                }
                parts
                    .into_iter()
                    .map(|(c, n, d)| {
                        let scale = if d.is_one() { lcm.clone() } else { lcm.exact_div(&d, field).unwrap() };
                        (c, n.mul(&scale, field))
                    })
                    .collect()
            })
            .collect();
        let mut m = PolyMatrix { field: field.clone(), level, cols: cols.len(), rows };
        m.remove_contents();
        m
    }

    /// Divides rows, then columns, by the gcd of their entries until stable.
    fn remove_contents(&mut self) {
        let f = self.field.clone();
        let content = |entries: &mut dyn Iterator<Item = &Poly>| -> Poly {
            let mut g = Poly::zero();
            for e in entries {
                g = Poly::gcd(&g, e, &f);
                if g.is_one() {
                    break;
                }
            }
            g
        };
        loop {
            let mut changed = false;
            for r in self.rows.iter_mut() {
                let g = content(&mut r.values());
                if g.degree().unwrap_or(0) > 0 {
                    changed = true;
                    for v in r.values_mut() {
                        *v = v.exact_div(&g, &f).unwrap();
                    }
                }
            }
            for c in 0..self.cols {
                let g = content(&mut self.rows.iter().filter_map(|r| r.get(&c)));
                if g.degree().unwrap_or(0) > 0 {
                    changed = true;
                    for r in self.rows.iter_mut() {
                        if let Some(v) = r.get_mut(&c) {
                            *v = v.exact_div(&g, &f).unwrap();
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Rank of the reduction modulo `ext`'s modulus; a lower bound for the true rank.
    pub fn modular_rank(&self, ext: &ExtField) -> usize {
        let dense: Vec<Vec<Poly>> = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![Poly::zero(); self.cols];
                for (c, v) in r {
                    row[*c] = ext.reduce(v);
                }
                row
            })
            .collect();
        ext.rank(dense)
    }

    pub fn max_degree(&self) -> u64 {
        self.rows.iter().flat_map(|r| r.values().filter_map(Poly::degree)).max().unwrap_or(0)
    }

    /// Fraction-free elimination with rank pivoting.
    pub fn bareiss_rank(&self) -> usize {
        let f = &self.field;
        let mut rows: Vec<BTreeMap<usize, Poly>> = self.rows.clone();
        let mut prev = Poly::one();
        let mut rank = 0;
        for col in 0..self.cols {
            // Pivot: smallest entry among rows not yet used.
            let pick = rows[rank..]
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r.get(&col).map(|p| (i + rank, p.degree().unwrap_or(0), p.len())))
                .min_by_key(|&(_, d, l)| (d, l));
            let Some((pi, _, _)) = pick else { continue };
            rows.swap(rank, pi);
            let pivot_row = rows[rank].clone();
            let pv = pivot_row[&col].clone();
            let rest: Vec<BTreeMap<usize, Poly>> = rows.drain(rank + 1..).collect();
            let updated: Vec<BTreeMap<usize, Poly>> = {
                use rayon::prelude::*;
                rest.into_par_iter()
                    .map(|r| {
                        let a = match r.get(&col) {
                            Some(a) => a.clone(),
                            None => {
                                // Row untouched except for the Bareiss scaling.
                                return r
                                    .into_iter()
                                    .filter(|(c, _)| *c > col)
                                    .map(|(c, v)| {
                                        let v = v.mul(&pv, f);
                                        (c, if prev.is_one() { v } else { v.exact_div(&prev, f).expect("bareiss") })
                                    })
                                    .collect();
                            }
                        };
                        let mut out = BTreeMap::new();
                        let keys: std::collections::BTreeSet<usize> =
                            r.keys().chain(pivot_row.keys()).copied().filter(|&c| c > col).collect();
                        for c in keys {
                            let x = r.get(&c).map(|v| v.mul(&pv, f)).unwrap_or_else(Poly::zero);
                            let y = pivot_row.get(&c).map(|v| v.mul(&a, f)).unwrap_or_else(Poly::zero);
                            let v = x.sub(&y, f);
                            if v.is_zero() {
                                continue;
                            }
                            let v = if prev.is_one() { v } else { v.exact_div(&prev, f).expect("bareiss") };
                            out.insert(c, v);
                        }
                        out
                    })
                    .filter(|r: &BTreeMap<usize, Poly>| !r.is_empty())
                    .collect()
            };
            rows.truncate(rank + 1);
            rows.extend(updated);
            prev = pv;
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

/// Exact rank over the coefficient field.
///
/// Reduction modulo an irreducible `P` can only lower the rank, so a full-rank
/// reduction certifies full rank; otherwise Bareiss decides.
pub fn exact_rank(field: &Fq, vectors: &[LinFun], window: Option<u32>) -> RankResult {
    use rand::SeedableRng;
    let m = PolyMatrix::from_vectors(field, vectors, window);
    let full = m.cols.min(m.rows.len());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let ext = ExtField::random(field, 1 << 20, &mut rng);
    let rank = if m.modular_rank(&ext) == full { full } else { m.bareiss_rank() };
    RankResult { rank, rows: m.rows.len(), cols: m.cols, failure_bound: None }
}

/// Arithmetic in `F_q[y]/(P)` for an irreducible `P`.
pub struct ExtField {
    field: Fq,
    modulus: Poly,
}

impl ExtField {
    /// Random irreducible modulus of the least degree with `q^s ≥ min_size`.
    pub fn random<R: Rng>(field: &Fq, min_size: u64, rng: &mut R) -> ExtField {
        let q = field.q() as u64;
        let mut s = 1u32;
        while q.saturating_pow(s) < min_size {
            s += 1;
        }
        loop {
            let mut coeffs: Vec<FqElem> = (0..s).map(|_| FqElem(rng.gen_range(0..field.q()))).collect();
            coeffs.push(FqElem::ONE);
            let p = Poly::from_dense(&coeffs);
            if is_irreducible(&p, field) {
                return ExtField { field: field.clone(), modulus: p };
            }
        }
    }

    pub fn degree(&self) -> u64 {
        self.modulus.degree().unwrap()
    }

    pub fn size(&self) -> f64 {
        (self.field.q() as f64).powi(self.degree() as i32)
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.rem(&self.modulus, &self.field)
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b, &self.field))
    }

    fn inv(&self, a: &Poly) -> Poly {
        // Extended Euclid on (a, P).
        let f = &self.field;
        let (mut r0, mut r1) = (self.modulus.clone(), a.clone());
        let (mut s0, mut s1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1, f);
            let s = s0.sub(&qt.mul(&s1, f), f);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let c = f.inv(r0.lead()).expect("modulus is irreducible");
        self.reduce(&s0.scale(c, f))
    }

    /// Lower bound on the number of monic irreducibles of this degree.
    pub fn irreducible_count(&self) -> f64 {
        let q = self.field.q() as f64;
        let s = self.degree() as f64;
        ((q.powf(s) - 2.0 * q.powf(s / 2.0)) / s).max(1.0)
    }

    /// Rank of a dense matrix over the extension.
    pub fn rank(&self, mut m: Vec<Vec<Poly>>) -> usize {
        let f = &self.field;
        let cols = m.first().map(|r| r.len()).unwrap_or(0);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(rank, p);
            let inv = self.inv(&m[rank][c]);
            let pivot: Vec<Poly> = m[rank].iter().map(|v| self.mul(v, &inv)).collect();
            for row in m.iter_mut().skip(rank + 1) {
                if row[c].is_zero() {
                    continue;
                }
                let a = row[c].clone();
                for k in c..cols {
                    if pivot[k].is_zero() {
                        continue;
                    }
                    row[k] = row[k].sub(&self.mul(&a, &pivot[k]), f);
                }
            }
            m[rank] = pivot;
            rank += 1;
        }
        rank
    }
}

/// Rank modulo random irreducibles `P` with `q^{deg P} ≥ 2^20` (the image of `y`
/// in `F_q[y]/(P)` is a random point); max over trials.
pub fn probabilistic_rank(field: &Fq, vectors: &[LinFun], window: Option<u32>, trials: u32, seed: u64) -> RankResult {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let m = PolyMatrix::from_vectors(field, vectors, window);
    let mut best = 0;
    let mut per_trial = 1.0f64;
    for _ in 0..trials.max(1) {
        let ext = ExtField::random(field, 1 << 20, &mut rng);
        best = best.max(m.modular_rank(&ext));
        // A nonzero minor of degree ≤ r·max_degree has at most that many over
        // deg P irreducible factors of degree deg P.
        let r = (best + 1).min(m.cols.min(m.rows.len())) as f64;
        let bad = r * m.max_degree() as f64 / ext.degree() as f64;
        per_trial = (bad / ext.irreducible_count()).min(1.0);
    }
    let bound = if best == m.cols.min(m.rows.len()) { 0.0 } else { per_trial.powi(trials.max(1) as i32) };
    RankResult { rank: best, rows: m.rows.len(), cols: m.cols, failure_bound: Some(bound) }
}

/// Dispatches on [`RankMode`].
pub fn rank(field: &Fq, vectors: &[LinFun], window: Option<u32>, mode: RankMode) -> RankResult {
    match mode {
        RankMode::Exact => exact_rank(field, vectors, window),
        RankMode::Probabilistic { trials, seed } => probabilistic_rank(field, vectors, window, trials, seed),
    }
}
