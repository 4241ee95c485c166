//! Exact big-integer helpers shared by the field and code modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // exact by Sylvester's identity
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Smallest integer whose square is at least `n`.
pub fn ceil_sqrt(n: &BigUint) -> BigUint {
    let s = n.sqrt();
    if &s * &s == *n {
        s
    } else {
        s + 1u32
    }
}

/// Largest `x >= 0` with `x^k <= n`, by binary search.
pub fn floor_root(n: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1);
    if k == 1 || n.is_zero() {
        return n.clone();
    }
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one() << (n.bits() / k as u64 + 1);
    // lo^k <= n < hi^k
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1;
        if mid.pow(k) <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Natural logarithm of a positive integer of any size.
pub fn ln(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "ln(0)");
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    // keep the top 64 bits as the mantissa
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Combine residues `r_i mod m_i` (pairwise coprime moduli) into the unique
/// representative in `[0, prod m_i)`.
pub fn crt(residues: &[u64], moduli: &[u64]) -> BigUint {
    debug_assert_eq!(residues.len(), moduli.len());
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (&r, &m) in residues.iter().zip(moduli) {
        let m = BigInt::from(m);
        // x + modulus * t = r (mod m)
        let (g, inv, _) = ext_gcd(&modulus, &m);
        debug_assert!(g.is_one(), "moduli must be coprime");
        let t = ((BigInt::from(r) - &x) * inv).mod_floor(&m);
        x += &modulus * t;
        modulus *= m;
    }
    x.to_biguint().expect("CRT representative is nonnegative")
}
