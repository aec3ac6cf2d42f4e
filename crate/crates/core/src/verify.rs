//! Identity sweeps with pass/fail reports.
//!
//! Every sweep takes a `perturb` flag that breaks the identity on purpose, so
//! a run with `perturb = true` must fail.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::field::Fq;
use crate::linfun::{LinFun, LinMonomial};
use crate::perfect::PerfectRational;
use crate::place::{irreducibles, Place};
use crate::ring::{rewrite, CarlitzRing, RingElem};
use crate::special::CarlitzCache;

const MAX_LISTED: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub q: u32,
    pub cases: usize,
    pub failure_count: usize,
    /// First few counterexamples.
    pub failures: Vec<String>,
    pub perturbed: bool,
}

impl VerifyReport {
    fn collect(check: &str, q: u32, perturbed: bool, outcomes: Vec<Option<String>>) -> Self {
        let cases = outcomes.len();
        let all: Vec<String> = outcomes.into_iter().flatten().collect();
        VerifyReport {
            check: check.into(),
            q,
            cases,
            failure_count: all.len(),
            failures: all.into_iter().take(MAX_LISTED).collect(),
            perturbed,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

fn bump(a: PerfectRational, perturb: bool) -> PerfectRational {
    if perturb {
        a.add(&PerfectRational::one(a.field()))
    } else {
        a
    }
}

/// Pascal identity for `0 ≤ m ≤ k`, `1 ≤ k ≤ k_max`.
pub fn pascal(cache: &CarlitzCache, k_max: u32, perturb: bool) -> VerifyReport {
    let pairs: Vec<(u32, u32)> = (1..=k_max).flat_map(|k| (0..=k).map(move |m| (k, m))).collect();
    let out = pairs
        .par_iter()
        .map(|&(k, m)| {
            let (l, r) = cache.pascal_sides(k, m);
            (bump(l, perturb) != r).then(|| format!("k={k} m={m}"))
        })
        .collect();
    VerifyReport::collect("pascal", cache.field().q(), perturb, out)
}

/// Which coefficient table the Vandermonde sweep uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VandermondeForm {
    /// Weight `D_{m−i}^{q−1}` at every step.
    Literal,
    /// Weight `D_{m−i}^{(q−1)q^l}` at step `l`.
    Twisted,
}

/// Vandermonde identity for `0 ≤ l ≤ m ≤ k ≤ k_max`.
pub fn vandermonde(cache: &CarlitzCache, k_max: u32, form: VandermondeForm, perturb: bool) -> VerifyReport {
    let triples: Vec<(u32, u32, u32)> = (0..=k_max)
        .flat_map(|k| (0..=k).flat_map(move |m| (0..=m).map(move |l| (k, m, l))))
        .collect();
    let out = triples
        .par_iter()
        .map(|&(k, m, l)| {
            let (lhs, rhs) = cache.vandermonde_sides(k, m, l, form == VandermondeForm::Twisted);
            (bump(lhs, perturb) != rhs).then(|| format!("k={k} m={m} l={l}"))
        })
        .collect();
    let name = match form {
        VandermondeForm::Literal => "vandermonde-literal",
        VandermondeForm::Twisted => "vandermonde-twisted",
    };
    VerifyReport::collect(name, cache.field().q(), perturb, out)
}

/// `e_k(st) = Σ binomK(k,m) e_m(s) e_{k−m}(t)^{q^m}` for `k ≤ k_max` on random `s, t ∈ F_q[x]`.
pub fn kbinom(cache: &CarlitzCache, k_max: u32, samples: usize, deg: u64, seed: u64, perturb: bool) -> VerifyReport {
    let f = cache.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(PerfectRational, PerfectRational)> = (0..samples)
        .map(|_| (PerfectRational::random_poly(&f, &mut rng, deg, 0), PerfectRational::random_poly(&f, &mut rng, deg, 0)))
        .collect();
    let cases: Vec<(u32, usize)> = (0..=k_max).flat_map(|k| (0..samples).map(move |i| (k, i))).collect();
    let out = cases
        .par_iter()
        .map(|&(k, i)| {
            let (s, t) = &pairs[i];
            let (l, r) = cache.kbinom_sides(k, s, t);
            (bump(l, perturb) != r).then(|| format!("k={k} s={s} t={t}"))
        })
        .collect();
    VerifyReport::collect("kbinom", f.q(), perturb, out)
}

/// The PDE for the binomial generating series, `d_s C = C`, and `d_s f_i = f_{i−1}`.
pub fn pde(cache: &CarlitzCache, order: u32, perturb: bool) -> VerifyReport {
    let f = cache.field().clone();
    let mut out = Vec::new();
    let mut g = cache.genfun_binom(order);
    if perturb {
        g.body.add_term(LinMonomial::new(0, vec![1]), PerfectRational::x(&f));
    }
    out.push(match cache.pde_check(&g) {
        Ok(r) if r.holds => None,
        Ok(r) => Some(format!("pde T={order} witness {}", r.witness.unwrap_or_default())),
        Err(e) => Some(format!("pde T={order}: {e}")),
    });
    let c = cache.carlitz_module_trunc(order);
    let target = if perturb { c.scale(&PerfectRational::x(&f)) } else { c.clone() };
    out.push(match c.apply_ds() {
        Ok(d) => {
            let r = d.compare(&target);
            (!r.equal).then(|| format!("d_s C ≠ C on window {} at {:?}", r.window, r.witness.map(|m| m.to_string())))
        }
        Err(e) => Some(format!("d_s C: {e}")),
    });
    for i in 1..=order {
        let lhs = cache.carlitz_f(i).apply_ds();
        let rhs = cache.carlitz_f(if perturb { i } else { i - 1 });
        out.push(match lhs {
            Ok(l) if l == rhs => None,
            _ => Some(format!("d_s f_{i} ≠ f_{}", i - 1)),
        });
    }
    VerifyReport::collect("pde", f.q(), perturb, out)
}

/// Contiguity `d_s F(−a; −b) = F(−a+1; −b+1)` for `(l, λ)` parameter counts and parameters `≤ p_max`.
pub fn contiguous(cache: &CarlitzCache, p_max: u32, shapes: &[(usize, usize)], perturb: bool) -> VerifyReport {
    let mut cases = Vec::new();
    for &(l, lam) in shapes {
        let n = l + lam;
        let mut params = vec![0u32; n];
        loop {
            cases.push((params[..l].to_vec(), params[l..].to_vec()));
            let mut idx = 0;
            while idx < n && params[idx] == p_max {
                params[idx] = 0;
                idx += 1;
            }
            if idx == n {
                break;
            }
            params[idx] += 1;
        }
    }
    let out = cases
        .par_iter()
        .map(|(a, b)| {
            let ok = if perturb {
                let lhs = cache.thakur_hyp(a, b, u32::MAX).apply_ds().unwrap();
                lhs == cache.thakur_hyp(a, b, u32::MAX)
            } else {
                cache.contiguous_check(a, b)
            };
            (!ok).then(|| format!("a={a:?} b={b:?}"))
        })
        .collect();
    VerifyReport::collect("contiguous", cache.field().q(), perturb, out)
}

/// Integrality of `binomK(k,m)` at every place of degree `≤ delta_max`, and the closed form for `v_π(D_m)`.
pub fn places(cache: &CarlitzCache, k_max: u32, delta_max: u32, perturb: bool) -> VerifyReport {
    let q = cache.field().q();
    if !perturb {
        let r = cache.place_integrality_sweep(k_max, delta_max);
        let mut out: Vec<Option<String>> = vec![None; r.pairs_checked + r.factorials_checked];
        let mut i = 0;
        for v in &r.violations {
            out[i] = Some(format!("v_{}(binomK({},{})) = {}", v.place, v.k, v.m, v.valuation));
            i += 1;
        }
        for m in &r.closed_form_mismatches {
            out[i] = Some(format!("v_{}(D_{}) direct {} closed {}", m.place, m.m, m.direct, m.closed));
            i += 1;
        }
        return VerifyReport::collect("places", q, perturb, out);
    }
    let ps: Vec<Place> = (1..=delta_max).flat_map(|d| irreducibles(cache.field(), d)).collect();
    let mut out = Vec::new();
    for p in &ps {
        let pi = PerfectRational::from_poly(&p.pi());
        for k in 0..=k_max {
            for m in 0..=k {
                let v = p.valuation(&cache.binom_k(k as i64, m as i64).div(&pi).unwrap());
                out.push((!v.is_nonnegative()).then(|| format!("v_{p}(binomK({k},{m})/π) = {v}")));
            }
        }
    }
    VerifyReport::collect("places", q, perturb, out)
}

/// Associativity, agreement with the rewriting engine, and product = composition
/// of actions on random elements; plus faithfulness probes.
pub fn ring(field: &Fq, n: usize, samples: usize, deg: u32, seed: u64, perturb: bool) -> VerifyReport {
    let ring = CarlitzRing::new(field, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<(RingElem, RingElem, RingElem, LinFun)> = (0..samples)
        .map(|_| {
            let a = ring.random_elem(&mut rng, deg, 3, 1);
            let b = ring.random_elem(&mut rng, deg, 3, 1);
            let c = ring.random_elem(&mut rng, deg, 2, 1);
            let f = ring.random_fun(&mut rng, 4, 3, 1);
            (a, b, c, f)
        })
        .collect();
    let one = RingElem::one(field, n);
    let out = inputs
        .par_iter()
        .enumerate()
        .map(|(i, (a, b, c, f))| {
            let b2 = if perturb { b.add(&one) } else { b.clone() };
            let ab = ring.mul(a, b);
            if ring.mul(&ab, c) != ring.mul(a, &ring.mul(&b2, c)) {
                return Some(format!("sample {i}: (ab)c ≠ a(bc)"));
            }
            if ab != rewrite::mul(a, &b2) {
                return Some(format!("sample {i}: closed form ≠ rewriting"));
            }
            let lhs = ring.apply(&ab, f);
            let rhs = ring.apply(&b2, f).and_then(|g| ring.apply(a, &g));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => {}
                _ => return Some(format!("sample {i}: (ab)f ≠ a(bf)")),
            }
            None
        })
        .collect();
    VerifyReport::collect("ring", field.q(), perturb, out)
}

/// `probe_independence` finds a witness for `samples` random nonzero elements.
pub fn faithfulness(field: &Fq, n: usize, samples: usize, deg: u32, seed: u64) -> VerifyReport {
    let ring = CarlitzRing::new(field, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elems: Vec<RingElem> = (0..samples)
        .map(|_| loop {
            let terms = rng.gen_range(1..=4);
            let a = ring.random_elem(&mut rng, deg, terms, 1);
            if !a.is_zero() {
                break a;
            }
        })
        .collect();
    let out = elems
        .par_iter()
        .enumerate()
        .map(|(i, a)| match ring.probe_independence(a, deg + 2) {
            Ok(Some(_)) => None,
            _ => Some(format!("sample {i}: no witness for {a}")),
        })
        .collect();
    VerifyReport::collect("faithfulness", field.q(), false, out)
}
