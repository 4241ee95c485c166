//! Word-sized arithmetic in prime fields F_p and dense polynomials over them.
//!
//! Residues are `u64` in `[0, p)`; products go through `u128`. Polynomials are
//! coefficient vectors, constant term first, with trailing zeros trimmed (the
//! zero polynomial is the empty vector).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero");
    pow_mod(a, p - 2, p)
}

/// Canonical residue of an arbitrary integer.
pub fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`, if one fits in a u64.
pub fn next_prime(n: u64) -> Option<u64> {
    let mut c = n.max(2);
    loop {
        if is_prime(c) {
            return Some(c);
        }
        c = c.checked_add(1)?;
    }
}

pub fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree of a trimmed polynomial; `None` for zero.
pub fn degree(f: &[u64]) -> Option<usize> {
    f.len().checked_sub(1)
}

/// Horner evaluation.
pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter()
        .rev()
        .fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

/// Reduce integer coefficients modulo p.
pub fn from_integers(coeffs: &[BigInt], p: u64) -> Vec<u64> {
    trim(coeffs.iter().map(|c| reduce(c, p)).collect())
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
        }
    }
    trim(out)
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            sub_mod(a, b, p)
        })
        .collect();
    trim(out)
}

/// Quotient and remainder of `f / g`; `g` must be nonzero.
pub fn div_rem(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dg = degree(g).expect("division by the zero polynomial");
    let lead_inv = inv_mod(g[dg], p);
    let mut rem = f.to_vec();
    if rem.len() <= dg {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![0u64; rem.len() - dg];
    for k in (dg..rem.len()).rev() {
        let c = mul_mod(rem[k], lead_inv, p);
        if c == 0 {
            continue;
        }
        quot[k - dg] = c;
        for (j, &gj) in g.iter().enumerate() {
            let idx = k - dg + j;
            rem[idx] = sub_mod(rem[idx], mul_mod(c, gj, p), p);
        }
    }
    rem.truncate(dg);
    (trim(quot), trim(rem))
}

pub fn rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    div_rem(f, g, p).1
}

pub fn make_monic(f: Vec<u64>, p: u64) -> Vec<u64> {
    match f.last() {
        None => f,
        Some(&lead) => {
            let inv = inv_mod(lead, p);
            f.into_iter().map(|c| mul_mod(c, inv, p)).collect()
        }
    }
}

/// Monic gcd.
pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(a, p)
}

/// `base^exp mod modulus` for polynomials.
pub fn pow_mod_poly(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], modulus, p);
    let mut b = rem(base, modulus, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), modulus, p);
        }
        b = rem(&mul(&b, &b, p), modulus, p);
        exp >>= 1;
    }
    acc
}

/// Ben-Or test: `f` (degree d >= 1) is irreducible over F_p iff
/// `gcd(x^(p^i) - x, f) = 1` for every `1 <= i <= d/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = make_monic(trim(f.to_vec()), p);
    let d = match degree(&f) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut frob = rem(&x, &f, p);
    for _ in 1..=d / 2 {
        frob = pow_mod_poly(&frob, p, &f, p);
        let g = gcd(&sub(&frob, &x, p), &f, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// All roots in F_p by scanning every residue.
pub fn roots_exhaustive(f: &[u64], p: u64) -> Vec<u64> {
    (0..p).filter(|&x| eval(f, x, p) == 0).collect()
}

/// All roots in F_p via `gcd(x^p - x, f)` and equal-degree splitting.
/// Requires an odd prime.
pub fn roots_by_splitting(f: &[u64], p: u64) -> Vec<u64> {
    let f = make_monic(trim(f.to_vec()), p);
    if degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let x = vec![0, 1];
    let xp = pow_mod_poly(&x, p, &f, p);
    let linear_part = gcd(&sub(&xp, &x, p), &f, p);
    let mut roots = Vec::new();
    split_linear(linear_part, p, &mut roots);
    roots.sort_unstable();
    roots
}

fn split_linear(g: Vec<u64>, p: u64, out: &mut Vec<u64>) {
    match degree(&g) {
        None | Some(0) => {}
        Some(1) => out.push(sub_mod(0, mul_mod(g[0], inv_mod(g[1], p), p), p)),
        Some(d) => {
            let half = (p - 1) / 2;
            for shift in 0..p {
                let h = pow_mod_poly(&[shift, 1], half, &g, p);
                let h = gcd(&sub(&h, &[1], p), &g, p);
                let dh = degree(&h).unwrap_or(0);
                if dh > 0 && dh < d {
                    let (q, _) = div_rem(&g, &h, p);
                    split_linear(h, p, out);
                    split_linear(make_monic(q, p), p, out);
                    return;
                }
            }
            unreachable!("distinct roots always separate for some shift");
        }
    }
}
