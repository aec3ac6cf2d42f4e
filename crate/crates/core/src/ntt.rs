//! Number-theoretic transform over the Goldilocks prime `2^64 - 2^32 + 1`.
//!
//! Used for integer convolutions of `F_p` coefficient vectors; the caller
//! guarantees every exact convolution coefficient stays below the modulus.

pub(crate) const MODULUS: u64 = 0xFFFF_FFFF_0000_0001;
const EPSILON: u64 = 0xFFFF_FFFF;
const GENERATOR: u64 = 7;
pub(crate) const TWO_ADICITY: u32 = 32;

#[inline(always)]
fn reduce128(x: u128) -> u64 {
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let hi_hi = hi >> 32;
    let hi_lo = hi & EPSILON;
    let (mut t0, borrow) = lo.overflowing_sub(hi_hi);
    if borrow {
        t0 = t0.wrapping_sub(EPSILON);
    }
    let t1 = hi_lo * EPSILON;
    let (res, carry) = t0.overflowing_add(t1);
    let mut res = res.wrapping_add(EPSILON * carry as u64);
    if res >= MODULUS {
        res -= MODULUS;
    }
    res
}

#[inline(always)]
fn mul(a: u64, b: u64) -> u64 {
    reduce128(a as u128 * b as u128)
}

#[inline(always)]
fn add(a: u64, b: u64) -> u64 {
    let (s, over) = a.overflowing_add(b);
    let (mut s, over2) = s.overflowing_add(EPSILON * over as u64);
    if over2 {
        s += EPSILON;
    }
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline(always)]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a.wrapping_sub(b).wrapping_add(MODULUS)
    }
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

fn transform(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow(GENERATOR, (MODULUS - 1) / len as u64);
        if invert {
            w = pow(w, MODULUS - 2);
        }
        let half = len / 2;
        let mut tw = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            tw.push(cur);
            cur = mul(cur, w);
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = mul(hi[k], tw[k]);
                lo[k] = add(u, v);
                hi[k] = sub(u, v);
            }
        }
        len <<= 1;
    }
    if invert {
        let ninv = pow(n as u64, MODULUS - 2);
        for x in a.iter_mut() {
            *x = mul(*x, ninv);
        }
    }
}

/// Exact integer convolution of two non-negative vectors, provided every
/// output coefficient is below [`MODULUS`].
pub(crate) fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let n = out_len.next_power_of_two();
    assert!(n.trailing_zeros() <= TWO_ADICITY, "convolution too long");
    let mut fa = vec![0u64; n];
    fa[..a.len()].copy_from_slice(a);
    let mut fb = vec![0u64; n];
    fb[..b.len()].copy_from_slice(b);
    transform(&mut fa, false);
    transform(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mul(*x, *y);
    }
    transform(&mut fa, true);
    fa.truncate(out_len);
    fa
}
