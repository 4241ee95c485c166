//! Totally split primes: root finding for `m_α` modulo p, prime search, and
//! construction of a field in which a given list of primes splits completely.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bigmath::ext_gcd;
use crate::error::{Error, Result};
use crate::fp;
use crate::number_field::NumberField;

/// Below this bound roots are found by scanning all of F_p.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 1 << 20;

/// Default ceiling for [`next_split_primes`].
pub const DEFAULT_SEARCH_CEILING: u64 = 1 << 31;

/// A rational prime that splits completely, with the roots of `m_α` mod p.
/// Root `j` (ascending) stands for the prime ideal `(p, α - β_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPrime {
    pub p: u64,
    pub roots: Vec<u64>,
}

impl SplitPrime {
    /// Check that `p` is prime, does not divide the discriminant, and that the
    /// roots are the δ distinct ascending roots of `m_α` mod p.
    pub fn validate(&self, field: &NumberField) -> Result<()> {
        if !fp::is_prime(self.p) {
            return Err(Error::InvalidPrime {
                p: self.p,
                reason: "not prime".into(),
            });
        }
        let expected = roots_mod_p(field, self.p);
        if !is_totally_split(field, self.p) || expected != self.roots {
            return Err(Error::NotSplit(self.p));
        }
        Ok(())
    }
}

/// Sorted roots of `m_α` in F_p.
pub fn roots_mod_p(field: &NumberField, p: u64) -> Vec<u64> {
    let f = field.min_poly_mod(p);
    if p < EXHAUSTIVE_ROOT_LIMIT || p == 2 {
        fp::roots_exhaustive(&f, p)
    } else {
        fp::roots_by_splitting(&f, p)
    }
}

/// `p` does not divide the discriminant and `m_α` has δ distinct roots mod p.
pub fn is_totally_split(field: &NumberField, p: u64) -> bool {
    if !fp::is_prime(p) || (field.discriminant() % BigInt::from(p)).is_zero() {
        return false;
    }
    roots_mod_p(field, p).len() == field.degree()
}

/// The first `count` totally split primes `>= start`, below `ceiling`.
pub fn next_split_primes_below(
    field: &NumberField,
    count: usize,
    start: u64,
    ceiling: u64,
) -> Result<Vec<SplitPrime>> {
    let mut out = Vec::with_capacity(count);
    let mut candidate = start.max(2);
    while out.len() < count {
        let p = match fp::next_prime(candidate) {
            Some(p) if p < ceiling => p,
            _ => return Err(Error::SearchLimitExceeded { ceiling }),
        };
        if !(field.discriminant() % BigInt::from(p)).is_zero() {
            let roots = roots_mod_p(field, p);
            if roots.len() == field.degree() {
                out.push(SplitPrime { p, roots });
            }
        }
        candidate = p + 1;
    }
    Ok(out)
}

/// The first `count` totally split primes `>= start`.
pub fn next_split_primes(field: &NumberField, count: usize, start: u64) -> Result<Vec<SplitPrime>> {
    next_split_primes_below(field, count, start, DEFAULT_SEARCH_CEILING)
}

/// Everything needed to re-check a constructed field by hand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConstructionCertificate {
    /// Lower coefficients `[b_0, …, b_{δ-1}]` of the monic polynomial f.
    #[serde(with = "bigint_strings")]
    pub poly: Vec<BigInt>,
    pub aux_prime: u64,
    /// Monic irreducible g mod `aux_prime`, constant term first, length δ + 1.
    pub aux_irreducible: Vec<u64>,
    #[serde(with = "bigint_pair")]
    pub bezout: (BigInt, BigInt),
    pub split_witnesses: Vec<SplitPrime>,
}

impl FieldConstructionCertificate {
    pub fn degree(&self) -> usize {
        self.poly.len()
    }

    /// The field defined by `poly`.
    pub fn field(&self) -> Result<NumberField> {
        NumberField::new(self.poly.clone())
    }

    /// Recheck every stated property without trusting how it was built.
    pub fn check(&self, primes: &[u64]) -> Result<()> {
        let bad = |what: &str| Err(Error::Internal(format!("certificate: {what}")));
        let q = cofactors(primes, self.aux_prime);
        let n = primes.len();
        let sum: BigInt = q[..n].iter().sum();
        if &self.bezout.0 * &sum + &self.bezout.1 * &q[n] != BigInt::one() {
            return bad("Bezout identity fails");
        }
        let mut f_aux: Vec<u64> = self.poly.iter().map(|c| fp::reduce(c, self.aux_prime)).collect();
        f_aux.push(1);
        if f_aux != self.aux_irreducible || !fp::is_irreducible(&f_aux, self.aux_prime) {
            return bad("f mod aux_prime is not the irreducible g");
        }
        let field = self.field()?;
        for (w, &p) in self.split_witnesses.iter().zip(primes) {
            if w.p != p || roots_mod_p(&field, p).len() != self.degree() || !is_totally_split(&field, p) {
                return bad("input prime does not split");
            }
        }
        Ok(())
    }
}

/// `q_i = Π_{j≠i} p_j` over the input primes followed by the auxiliary prime.
fn cofactors(primes: &[u64], aux: u64) -> Vec<BigInt> {
    let all: Vec<u64> = primes.iter().copied().chain(std::iter::once(aux)).collect();
    (0..all.len())
        .map(|i| {
            all.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &p)| BigInt::from(p))
                .product()
        })
        .collect()
}

/// Lexicographically first monic irreducible polynomial of the given degree
/// mod p (lower coefficients read as a base-p counter, constant term lowest).
pub fn first_irreducible(degree: usize, p: u64) -> Vec<u64> {
    let mut lower = vec![0u64; degree];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if fp::is_irreducible(&f, p) {
            return f;
        }
        for c in lower.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
}

/// Build a monic integer polynomial of degree `delta`, irreducible modulo an
/// auxiliary prime, in which every prime of `primes` splits completely.
///
/// With `h(x) = Π_{j<δ} (x - j)`, `q_i = Π_{j≠i} p_j` and
/// `u_1 Σ_{i≤n} q_i + u_2 q_{n+1} = 1`, the polynomial is
/// `f = u_1 Σ_{i≤n} q_i h(x) + u_2 q_{n+1} g(x)`, so `f ≡ h (mod p_i)` and
/// `f ≡ g (mod p_{n+1})`.
pub fn construct_field(delta: usize, primes: &[u64]) -> Result<FieldConstructionCertificate> {
    if delta < 2 {
        return Err(Error::DegreeTooSmall(delta));
    }
    if primes.is_empty() {
        return Err(Error::InvalidParams("need at least one prime".into()));
    }
    for (i, &p) in primes.iter().enumerate() {
        let reason = if !fp::is_prime(p) {
            Some("not prime".to_string())
        } else if p <= delta as u64 {
            Some(format!("must exceed the degree {delta}"))
        } else if primes[..i].contains(&p) {
            Some("duplicate".to_string())
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(Error::InvalidPrime { p, reason });
        }
    }

    let mut aux = 2u64;
    while primes.contains(&aux) {
        aux = fp::next_prime(aux + 1).expect("prime below 2^64");
    }
    let g = first_irreducible(delta, aux);

    let q = cofactors(primes, aux);
    let n = primes.len();
    let sum: BigInt = q[..n].iter().sum();
    let (gcd, u1, u2) = ext_gcd(&sum, &q[n]);
    if !gcd.is_one() {
        return Err(Error::Internal("cofactor sum not coprime to q_{n+1}".into()));
    }

    // h(x) = Π (x - j), full coefficient vector of length δ + 1
    let mut h = vec![BigInt::one()];
    for j in 0..delta {
        let mut next = vec![BigInt::zero(); h.len() + 1];
        for (k, c) in h.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * BigInt::from(j);
        }
        h = next;
    }
    let a = &u1 * &sum;
    let b = &u2 * &q[n];
    let full: Vec<BigInt> = (0..=delta)
        .map(|k| &a * &h[k] + &b * BigInt::from(g[k]))
        .collect();
    if !full[delta].is_one() {
        return Err(Error::Internal("constructed polynomial is not monic".into()));
    }
    let poly = full[..delta].to_vec();

    let field = NumberField::new(poly.clone())?;
    let split_witnesses = primes
        .iter()
        .map(|&p| SplitPrime {
            p,
            roots: roots_mod_p(&field, p),
        })
        .collect();

    let cert = FieldConstructionCertificate {
        poly,
        aux_prime: aux,
        aux_irreducible: g,
        bezout: (u1, u2),
        split_witnesses,
    };
    cert.check(primes)?;
    Ok(cert)
}

/// Convenience wrapper returning the field as well.
pub fn construct_field_with(delta: usize, primes: &[u64]) -> Result<(Arc<NumberField>, FieldConstructionCertificate)> {
    let cert = construct_field(delta, primes)?;
    Ok((Arc::new(cert.field()?), cert))
}

pub(crate) mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|b| b.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

mod bigint_pair {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &(BigInt, BigInt), s: S) -> Result<S::Ok, S::Error> {
        (v.0.to_string(), v.1.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(BigInt, BigInt), D::Error> {
        let (a, b) = <(String, String)>::deserialize(d)?;
        Ok((
            a.parse().map_err(serde::de::Error::custom)?,
            b.parse().map_err(serde::de::Error::custom)?,
        ))
    }
}
