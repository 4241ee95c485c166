//! Exact arithmetic in `Z[α]` for a number field `K = Q(α)` given by the monic
//! minimal polynomial of `α`.
//!
//! Elements are integer coefficient vectors over the power basis
//! `1, α, …, α^(δ-1)`. Norms are determinants of the multiplication matrix.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bigmath::{bareiss_det, ceil_sqrt};
use crate::error::{Error, Result};
use crate::fp;

/// How many small primes are tried when looking for a mod-p irreducibility
/// certificate.
pub const IRREDUCIBILITY_PRIMES: usize = 50;

/// Largest `|b_0|` for which rational roots are searched by divisor enumeration.
const RATIONAL_ROOT_LIMIT: u64 = 1 << 40;

/// Whether a field whose irreducibility could not be certified is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Irreducibility {
    /// Reject unless irreducibility is certified.
    #[default]
    Strict,
    /// Accept an uncertified polynomial (with a warning). A polynomial with a
    /// rational root is still rejected.
    AllowUncertified,
}

/// How irreducibility of the minimal polynomial was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrreducibilityCertificate {
    /// Irreducible modulo this prime.
    ModPrime(u64),
    /// Degree 2 or 3 without rational roots.
    NoRationalRoot,
    /// Not certified; accepted by override.
    Uncertified,
}

#[derive(Clone)]
pub struct NumberField {
    min_poly: Vec<BigInt>,
    coeff_bound: BigInt,
    c_alpha: BigInt,
    discriminant: BigInt,
    certificate: IrreducibilityCertificate,
}

impl NumberField {
    /// Field defined by the monic polynomial `b_0 + b_1 x + … + x^δ`, where
    /// `min_poly = [b_0, …, b_{δ-1}]`.
    pub fn new(min_poly: Vec<BigInt>) -> Result<Self> {
        Self::with_policy(min_poly, Irreducibility::Strict)
    }

    pub fn from_i64(min_poly: &[i64]) -> Result<Self> {
        Self::new(min_poly.iter().map(|&b| BigInt::from(b)).collect())
    }

    pub fn with_policy(min_poly: Vec<BigInt>, policy: Irreducibility) -> Result<Self> {
        let degree = min_poly.len();
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        let discriminant = discriminant(&min_poly);
        if discriminant.is_zero() {
            return Err(Error::ZeroDiscriminant);
        }
        let coeff_bound = min_poly.iter().map(|b| b.abs()).max().unwrap();
        let c_alpha = c_alpha(degree, &coeff_bound);
        let certificate = certify_irreducible(&min_poly, &discriminant, policy)?;
        Ok(NumberField {
            min_poly,
            coeff_bound,
            c_alpha,
            discriminant,
            certificate,
        })
    }

    /// δ
    pub fn degree(&self) -> usize {
        self.min_poly.len()
    }

    /// `[b_0, …, b_{δ-1}]`; the leading 1 is implicit.
    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    /// S = max |b_i|
    pub fn coeff_bound(&self) -> &BigInt {
        &self.coeff_bound
    }

    /// Upper bound `δ^(δ/2) (1+S)^((δ-1)δ/2)`, rounded up to an integer when
    /// δ is odd.
    pub fn c_alpha(&self) -> &BigInt {
        &self.c_alpha
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn certificate(&self) -> &IrreducibilityCertificate {
        &self.certificate
    }

    /// `m_α(x)` at an integer point.
    pub fn eval_min_poly(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::one();
        for b in self.min_poly.iter().rev() {
            acc = acc * x + b;
        }
        acc
    }

    /// `m_α` reduced modulo p, monic, constant term first.
    pub fn min_poly_mod(&self, p: u64) -> Vec<u64> {
        let mut f: Vec<u64> = self.min_poly.iter().map(|b| fp::reduce(b, p)).collect();
        f.push(1 % p);
        fp::trim(f)
    }

    /// `C_α (M-1)^δ`, the bound on `|N(y)|` for `y = Σ z_i α^i` with `|z_i| < M`.
    pub fn norm_bound(&self, m: &BigUint) -> BigInt {
        assert!(!m.is_zero(), "M must be positive");
        let base = BigInt::from(m.clone()) - 1u32;
        &self.c_alpha * base.pow(self.degree() as u32)
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<BigInt>) -> Result<AlgebraicInt> {
        if coeffs.len() != self.degree() {
            return Err(Error::WrongLength {
                expected: self.degree(),
                got: coeffs.len(),
            });
        }
        Ok(AlgebraicInt {
            field: Arc::clone(self),
            coeffs,
        })
    }

    pub fn element_i64(self: &Arc<Self>, coeffs: &[i64]) -> Result<AlgebraicInt> {
        self.element(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_int(self: &Arc<Self>, c: BigInt) -> AlgebraicInt {
        let mut coeffs = vec![BigInt::zero(); self.degree()];
        coeffs[0] = c;
        AlgebraicInt {
            field: Arc::clone(self),
            coeffs,
        }
    }

    pub fn zero(self: &Arc<Self>) -> AlgebraicInt {
        self.from_int(BigInt::zero())
    }

    pub fn one(self: &Arc<Self>) -> AlgebraicInt {
        self.from_int(BigInt::one())
    }

    /// The generator α.
    pub fn alpha(self: &Arc<Self>) -> AlgebraicInt {
        let mut coeffs = vec![BigInt::zero(); self.degree()];
        coeffs[1] = BigInt::one();
        AlgebraicInt {
            field: Arc::clone(self),
            coeffs,
        }
    }

    /// Reduce a polynomial in α of any degree to the power basis.
    fn reduce_poly(&self, mut poly: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        for k in (d..poly.len()).rev() {
            let top = std::mem::take(&mut poly[k]);
            if top.is_zero() {
                continue;
            }
            // α^k = α^(k-δ) · α^δ = -α^(k-δ) Σ b_i α^i
            for (i, b) in self.min_poly.iter().enumerate() {
                poly[k - d + i] -= &top * b;
            }
        }
        poly.resize(d, BigInt::zero());
        poly
    }

    /// Multiply a coefficient vector by α using
    /// `w·α = -b_0 w_{δ-1} + Σ_{i≥1} (w_{i-1} - b_i w_{δ-1}) α^i`.
    fn times_alpha(&self, w: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree();
        let top = &w[d - 1];
        let mut out = Vec::with_capacity(d);
        out.push(-(&self.min_poly[0] * top));
        for i in 1..d {
            out.push(&w[i - 1] - &self.min_poly[i] * top);
        }
        out
    }

    fn same_as(&self, other: &NumberField) -> bool {
        std::ptr::eq(self, other) || self.min_poly == other.min_poly
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("min_poly", &self.min_poly)
            .field("c_alpha", &self.c_alpha)
            .field("discriminant", &self.discriminant)
            .finish()
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}", self.degree())?;
        for (i, b) in self.min_poly.iter().enumerate().rev() {
            if b.is_zero() {
                continue;
            }
            let sign = if b.is_negative() { '-' } else { '+' };
            match i {
                0 => write!(f, " {sign} {}", b.abs())?,
                1 => write!(f, " {sign} {}x", b.abs())?,
                _ => write!(f, " {sign} {}x^{i}", b.abs())?,
            }
        }
        Ok(())
    }
}

/// JSON form: `{"min_poly": ["2", "0", "-4", "0"], "degree": 4}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldJson {
    pub min_poly: Vec<String>,
    pub degree: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_uncertified: bool,
}

impl From<&NumberField> for FieldJson {
    fn from(k: &NumberField) -> Self {
        FieldJson {
            min_poly: k.min_poly.iter().map(|b| b.to_string()).collect(),
            degree: k.degree(),
            allow_uncertified: k.certificate == IrreducibilityCertificate::Uncertified,
        }
    }
}

impl TryFrom<FieldJson> for NumberField {
    type Error = Error;

    fn try_from(j: FieldJson) -> Result<Self> {
        let coeffs = j
            .min_poly
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|e| Error::Serde(format!("bad coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != j.degree {
            return Err(Error::Serde(format!(
                "degree {} but {} coefficients",
                j.degree,
                coeffs.len()
            )));
        }
        let policy = if j.allow_uncertified {
            Irreducibility::AllowUncertified
        } else {
            Irreducibility::Strict
        };
        NumberField::with_policy(coeffs, policy)
    }
}

impl Serialize for NumberField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for NumberField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FieldJson::deserialize(d)?;
        NumberField::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// An element `Σ z_i α^i` of `Z[α]`. Coefficients are unbounded.
#[derive(Clone)]
pub struct AlgebraicInt {
    field: Arc<NumberField>,
    coeffs: Vec<BigInt>,
}

impl AlgebraicInt {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn check(&self, other: &AlgebraicInt) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with_coeffs(&self, coeffs: Vec<BigInt>) -> AlgebraicInt {
        AlgebraicInt {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    pub fn add(&self, other: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.check(other)?;
        Ok(self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.check(other)?;
        Ok(self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn neg(&self) -> AlgebraicInt {
        self.with_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Product by schoolbook multiplication followed by reduction mod `m_α`.
    pub fn mul(&self, other: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.check(other)?;
        let d = self.field.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Ok(self.with_coeffs(self.field.reduce_poly(prod)))
    }

    /// Product computed as `Σ a_i (b α^i)`, building each `b α^i` by repeated
    /// multiplication by α. Agrees with [`AlgebraicInt::mul`].
    pub fn mul_by_shifts(&self, other: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.check(other)?;
        let d = self.field.degree();
        let mut acc = vec![BigInt::zero(); d];
        let mut w = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                for (slot, wk) in acc.iter_mut().zip(&w) {
                    *slot += a * wk;
                }
            }
            if i + 1 < d {
                w = self.field.times_alpha(&w);
            }
        }
        Ok(self.with_coeffs(acc))
    }

    pub fn mul_alpha(&self) -> AlgebraicInt {
        self.with_coeffs(self.field.times_alpha(&self.coeffs))
    }

    /// Matrix of `x ↦ y·x` in the power basis; column j holds `y·α^j`.
    pub fn multiplication_matrix(&self) -> Vec<Vec<BigInt>> {
        let d = self.field.degree();
        let mut columns = Vec::with_capacity(d);
        let mut w = self.coeffs.clone();
        for j in 0..d {
            columns.push(w.clone());
            if j + 1 < d {
                w = self.field.times_alpha(&w);
            }
        }
        (0..d)
            .map(|row| columns.iter().map(|col| col[row].clone()).collect())
            .collect()
    }

    /// `N(y) = det A_y`.
    pub fn norm(&self) -> BigInt {
        bareiss_det(self.multiplication_matrix())
    }

    /// Image under `Z[α] → F_p`, `α ↦ β` (β a root of `m_α` mod p).
    pub fn reduce_at(&self, p: u64, beta: u64) -> u64 {
        let coeffs: Vec<u64> = self.coeffs.iter().map(|c| fp::reduce(c, p)).collect();
        fp::eval(&coeffs, beta, p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl PartialEq for AlgebraicInt {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for AlgebraicInt {}

impl fmt::Debug for AlgebraicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("AlgebraicInt").field(&self.coeffs).finish()
    }
}

/// `C_α`; exact for even δ, rounded up for odd δ.
fn c_alpha(degree: usize, coeff_bound: &BigInt) -> BigInt {
    let d = degree as u32;
    let growth = (BigInt::one() + coeff_bound).pow(d * (d - 1) / 2);
    if d.is_multiple_of(2) {
        BigInt::from(d).pow(d / 2) * growth
    } else {
        // ⌈sqrt(δ^δ) · T⌉ = ⌈sqrt(δ^δ · T^2)⌉ for integer T
        let growth = growth.to_biguint().unwrap();
        let radicand = BigUint::from(d).pow(d) * &growth * &growth;
        BigInt::from(ceil_sqrt(&radicand))
    }
}

/// Resultant of two integer polynomials (constant term first) as the
/// determinant of their Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let df = f.len() - 1;
    let dg = g.len() - 1;
    let size = df + dg;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    // rows hold coefficients from the leading term down
    for i in 0..dg {
        for (k, c) in f.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..df {
        for (k, c) in g.iter().rev().enumerate() {
            rows[dg + i][i + k] = c.clone();
        }
    }
    bareiss_det(rows)
}

/// `(-1)^(δ(δ-1)/2) Res(m, m')` for the monic polynomial with lower
/// coefficients `min_poly`.
pub fn discriminant(min_poly: &[BigInt]) -> BigInt {
    let d = min_poly.len();
    let mut f = min_poly.to_vec();
    f.push(BigInt::one());
    let deriv: Vec<BigInt> = (1..=d).map(|i| &f[i] * BigInt::from(i)).collect();
    let res = resultant(&f, &deriv);
    if (d * (d - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

fn certify_irreducible(
    min_poly: &[BigInt],
    disc: &BigInt,
    policy: Irreducibility,
) -> Result<IrreducibilityCertificate> {
    let d = min_poly.len();
    let mut tried = 0;
    let mut p = 2u64;
    while tried < IRREDUCIBILITY_PRIMES {
        if (disc % BigInt::from(p)).is_zero() {
            p = fp::next_prime(p + 1).unwrap();
            continue;
        }
        tried += 1;
        let mut f: Vec<u64> = min_poly.iter().map(|b| fp::reduce(b, p)).collect();
        f.push(1);
        if fp::is_irreducible(&f, p) {
            return Ok(IrreducibilityCertificate::ModPrime(p));
        }
        p = fp::next_prime(p + 1).unwrap();
    }

    let rational_root = integer_root(min_poly);
    if let Some(Some(root)) = &rational_root {
        return Err(Error::NotIrreducible(format!("{root} is a rational root")));
    }
    if rational_root.is_some() && d <= 3 {
        return Ok(IrreducibilityCertificate::NoRationalRoot);
    }
    match policy {
        Irreducibility::Strict => Err(Error::NotIrreducible(format!(
            "no certificate among the first {IRREDUCIBILITY_PRIMES} primes not dividing the discriminant"
        ))),
        Irreducibility::AllowUncertified => {
            log::warn!("accepting minimal polynomial without an irreducibility certificate");
            Ok(IrreducibilityCertificate::Uncertified)
        }
    }
}

/// `Some(Some(r))` if the monic polynomial has integer root r, `Some(None)`
/// if it provably has none, `None` if `|b_0|` is too large to check.
fn integer_root(min_poly: &[BigInt]) -> Option<Option<BigInt>> {
    let b0 = min_poly[0].abs();
    if b0.is_zero() {
        return Some(Some(BigInt::zero()));
    }
    let b0 = b0.to_u64().filter(|&v| v <= RATIONAL_ROOT_LIMIT)?;
    let eval = |x: &BigInt| {
        let mut acc = BigInt::one();
        for b in min_poly.iter().rev() {
            acc = acc * x + b;
        }
        acc
    };
    let mut q = 1u64;
    while q * q <= b0 {
        if b0 % q == 0 {
            for c in [q, b0 / q] {
                for cand in [BigInt::from(c), -BigInt::from(c)] {
                    if eval(&cand).is_zero() {
                        return Some(Some(cand));
                    }
                }
            }
        }
        q += 1;
    }
    Some(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Arc<NumberField> {
        Arc::new(NumberField::from_i64(&[2, 0, -4, 0]).unwrap())
    }

    fn cyclotomic3() -> Arc<NumberField> {
        Arc::new(NumberField::from_i64(&[1, 1]).unwrap())
    }

    #[test]
    fn example_field_constants() {
        let k = example();
        assert_eq!(k.degree(), 4);
        assert_eq!(k.coeff_bound(), &BigInt::from(4));
        assert_eq!(k.c_alpha(), &BigInt::from(250_000));
        assert_eq!(k.discriminant(), &BigInt::from(2048));
    }

    #[test]
    fn quadratic_constants() {
        let k = cyclotomic3();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.coeff_bound(), &BigInt::from(1));
        assert_eq!(k.c_alpha(), &BigInt::from(4));
        assert_eq!(k.discriminant(), &BigInt::from(-3));
    }

    #[test]
    fn degree_one_rejected() {
        assert_eq!(
            NumberField::from_i64(&[-2]).unwrap_err(),
            Error::DegreeTooSmall(1)
        );
        assert_eq!(
            NumberField::from_i64(&[]).unwrap_err(),
            Error::DegreeTooSmall(0)
        );
    }

    #[test]
    fn repeated_root_rejected() {
        // (x - 1)^2
        assert_eq!(
            NumberField::from_i64(&[1, -2]).unwrap_err(),
            Error::ZeroDiscriminant
        );
    }

    #[test]
    fn rational_root_rejected_even_with_override() {
        // (x - 2)(x^2 + 1) = x^3 - 2x^2 + x - 2
        let coeffs: Vec<BigInt> = [-2, 1, -2].iter().map(|&c| BigInt::from(c)).collect();
        let err = NumberField::with_policy(coeffs, Irreducibility::AllowUncertified).unwrap_err();
        assert!(matches!(err, Error::NotIrreducible(_)));
    }

    #[test]
    fn x4_plus_1_needs_override() {
        let coeffs: Vec<BigInt> = [1, 0, 0, 0].iter().map(|&c| BigInt::from(c)).collect();
        assert!(matches!(
            NumberField::new(coeffs.clone()).unwrap_err(),
            Error::NotIrreducible(_)
        ));
        let k = NumberField::with_policy(coeffs, Irreducibility::AllowUncertified).unwrap();
        assert_eq!(k.certificate(), &IrreducibilityCertificate::Uncertified);
        assert_eq!(k.discriminant(), &BigInt::from(256));
    }

    #[test]
    fn cubic_c_alpha_rounds_up() {
        // x^3 - 2: δ = 3, S = 2, C = ⌈3^1.5 · 3^3⌉ = ⌈140.296…⌉
        let k = NumberField::from_i64(&[-2, 0, 0]).unwrap();
        assert_eq!(k.c_alpha(), &BigInt::from(141));
        assert_eq!(k.discriminant(), &BigInt::from(-108));
    }

    #[test]
    fn addition() {
        let k = example();
        let a = k.element_i64(&[1, 0, 0, 0]).unwrap();
        let b = k.element_i64(&[0, 1, 0, 0]).unwrap();
        assert_eq!(a.add(&b).unwrap(), k.element_i64(&[1, 1, 0, 0]).unwrap());
        assert_eq!(a.add(&k.zero()).unwrap(), a);
        let c = k.element_i64(&[2, -3, 0, 1]).unwrap();
        let d = k.element_i64(&[-2, 3, 0, -1]).unwrap();
        assert!(c.add(&d).unwrap().is_zero());
    }

    #[test]
    fn field_mismatch() {
        let a = example().one();
        let b = cyclotomic3().one();
        assert_eq!(a.add(&b).unwrap_err(), Error::FieldMismatch);
        assert_eq!(a.mul(&b).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn wrong_length() {
        assert!(matches!(
            example().element_i64(&[1, 2]),
            Err(Error::WrongLength { expected: 4, got: 2 })
        ));
    }

    #[test]
    fn multiplication_examples() {
        let k = example();
        let alpha = k.alpha();
        let alpha3 = k.element_i64(&[0, 0, 0, 1]).unwrap();
        let expect = k.element_i64(&[-2, 0, 4, 0]).unwrap();
        assert_eq!(alpha.mul(&alpha3).unwrap(), expect);
        assert_eq!(alpha.mul_by_shifts(&alpha3).unwrap(), expect);
        assert_eq!(alpha3.mul_alpha(), expect);

        let y = k.element_i64(&[3, -1, 4, 1]).unwrap();
        assert_eq!(k.one().mul(&y).unwrap(), y);

        let a = k.element_i64(&[1, 1, 0, 0]).unwrap();
        let b = k.element_i64(&[1, -1, 0, 0]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), k.element_i64(&[1, 0, -1, 0]).unwrap());
    }

    #[test]
    fn norm_examples() {
        let k = example();
        assert_eq!(k.one().norm(), BigInt::one());
        assert_eq!(k.alpha().norm(), BigInt::from(2));
        let one_plus_alpha = k.element_i64(&[1, 1, 0, 0]).unwrap();
        assert_eq!(one_plus_alpha.norm(), BigInt::from(-1));
    }

    #[test]
    fn norm_of_linear_is_min_poly_value() {
        for k in [example(), cyclotomic3()] {
            for c in -10..=10 {
                let mut v = vec![0i64; k.degree()];
                v[0] = c;
                v[1] = -1;
                let y = k.element_i64(&v).unwrap();
                let expect = k.eval_min_poly(&BigInt::from(c));
                assert_eq!(y.norm().abs(), expect.abs(), "c = {c}");
            }
        }
    }

    #[test]
    fn norm_bound_examples() {
        let k = example();
        assert_eq!(
            k.norm_bound(&BigUint::from(16u32)),
            BigInt::from(12_656_250_000u64)
        );
        assert_eq!(k.norm_bound(&BigUint::from(1u32)), BigInt::zero());
        assert_eq!(
            cyclotomic3().norm_bound(&BigUint::from(3u32)),
            BigInt::from(16)
        );
    }

    #[test]
    fn json_round_trip() {
        let k = example();
        let text = serde_json::to_string(&*k).unwrap();
        assert_eq!(text, r#"{"min_poly":["2","0","-4","0"],"degree":4}"#);
        let back: NumberField = serde_json::from_str(&text).unwrap();
        assert_eq!(back, *k);
        assert!(serde_json::from_str::<NumberField>(r#"{"min_poly":["2","0"],"degree":4}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(example().to_string(), "x^4 - 4x^2 + 2");
    }

    #[test]
    fn reduce_at_root() {
        let k = example();
        for beta in [5u64, 8, 9, 12] {
            assert_eq!(k.alpha().reduce_at(17, beta), beta);
            let a4 = k.element_i64(&[-2, 0, 4, 0]).unwrap();
            assert_eq!(a4.reduce_at(17, beta), fp::pow_mod(beta, 4, 17));
        }
    }
}
