//! Parameters of the split codes `C(r, s, K, M, {p_i})`: validation, the good
//! split condition, the covering cardinality `m`, and almost-good families.
//!
//! Every comparison is exact. Floating point appears only in [`rate`].

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bigmath::{floor_root, ln};
use crate::error::{Error, Result};
use crate::number_field::{FieldJson, NumberField};
use crate::prime_tools::{next_split_primes, SplitPrime};

/// Largest number of ideals [`compute_m_exhaustive`] will enumerate.
pub const EXHAUSTIVE_M_LIMIT: usize = 24;

/// A validated code `C(r, s, K, M, {p_i})` with its derived quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    field: Arc<NumberField>,
    r: u32,
    s: u32,
    radix: BigUint,
    primes: Vec<SplitPrime>,
    derived: Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derived {
    pub n: usize,
    /// Covering cardinality; absent when the code is not good.
    pub m: Option<usize>,
    pub dist_lb: Option<usize>,
    /// log_M of the code size, `r(s+1)`.
    pub size_exponent: u32,
    pub good: bool,
}

impl CodeSpec {
    pub fn new(
        field: Arc<NumberField>,
        r: u32,
        s: u32,
        radix: BigUint,
        primes: Vec<SplitPrime>,
    ) -> Result<Self> {
        validate(&field, r, &radix, &primes)?;
        let (good, _) = good_split_check(&field, r, s, &radix, &primes)?;
        let n = (r as usize + 1) * primes.len();
        let m = if good {
            Some(compute_m(&field, r, s, &radix, &primes)?)
        } else {
            None
        };
        let derived = Derived {
            n,
            m,
            dist_lb: m.map(|m| n - m + 1),
            size_exponent: r * (s + 1),
            good,
        };
        Ok(CodeSpec {
            field,
            r,
            s,
            radix,
            primes,
            derived,
        })
    }

    /// Look up roots for the given primes and build the spec.
    pub fn from_primes(
        field: Arc<NumberField>,
        r: u32,
        s: u32,
        radix: BigUint,
        primes: &[u64],
    ) -> Result<Self> {
        let split = primes
            .iter()
            .map(|&p| {
                let sp = SplitPrime {
                    p,
                    roots: crate::prime_tools::roots_mod_p(&field, p),
                };
                sp.validate(&field).map(|_| sp)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, r, s, radix, split)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Locality.
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// M
    pub fn radix(&self) -> &BigUint {
        &self.radix
    }

    pub fn primes(&self) -> &[SplitPrime] {
        &self.primes
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.primes.iter().map(|sp| sp.p).collect()
    }

    /// ℓ
    pub fn groups(&self) -> usize {
        self.primes.len()
    }

    /// r + 1
    pub fn group_len(&self) -> usize {
        self.r as usize + 1
    }

    pub fn derived(&self) -> &Derived {
        &self.derived
    }

    pub fn n(&self) -> usize {
        self.derived.n
    }

    pub fn m(&self) -> Option<usize> {
        self.derived.m
    }

    pub fn dist_lb(&self) -> Option<usize> {
        self.derived.dist_lb
    }

    pub fn is_good(&self) -> bool {
        self.derived.good
    }

    /// `M^(s+1)`, the exclusive bound on each message coefficient `u_i`.
    pub fn coeff_limit(&self) -> BigUint {
        self.radix.pow(self.s + 1)
    }

    /// Number of codewords, `M^(r(s+1))`.
    pub fn size(&self) -> BigUint {
        self.radix.pow(self.derived.size_exponent)
    }

    /// Right side of the good split inequality, `C_α (M^(s+1) - 1)^(r+1)`.
    pub fn norm_bound(&self) -> BigInt {
        self.field.norm_bound(&self.coeff_limit())
    }

    /// Message digits per codeword, `r(s+1)`.
    pub fn digits(&self) -> usize {
        self.derived.size_exponent as usize
    }
}

fn validate(field: &NumberField, r: u32, radix: &BigUint, primes: &[SplitPrime]) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidParams("locality r must be positive".into()));
    }
    if field.degree() != r as usize + 1 {
        return Err(Error::DegreeMismatch {
            degree: field.degree(),
            expected: r + 1,
        });
    }
    if *radix < BigUint::from(2u32) {
        return Err(Error::InvalidParams("M must be at least 2".into()));
    }
    if primes.is_empty() {
        return Err(Error::InvalidParams("need at least one prime".into()));
    }
    if primes.windows(2).any(|w| w[0].p >= w[1].p) {
        return Err(Error::InvalidParams("primes must be strictly ascending".into()));
    }
    if primes.len() > u16::MAX as usize {
        return Err(Error::InvalidParams("too many primes".into()));
    }
    for sp in primes {
        sp.validate(field)?;
    }
    Ok(())
}

/// Compare `(Π p_i)^(r+1)` with `C_α (M^(s+1) - 1)^(r+1)`. The margin is their
/// exact ratio.
pub fn good_split_check(
    field: &NumberField,
    r: u32,
    s: u32,
    radix: &BigUint,
    primes: &[SplitPrime],
) -> Result<(bool, BigRational)> {
    validate(field, r, radix, primes)?;
    let lhs: BigInt = primes
        .iter()
        .map(|sp| BigInt::from(sp.p))
        .product::<BigInt>()
        .pow(r + 1);
    let rhs = field.norm_bound(&radix.pow(s + 1));
    Ok((lhs > rhs, BigRational::new(lhs, rhs)))
}

/// Ideal norms with multiplicity, ascending: each `p_i` appears `r+1` times.
fn ideal_norms(r: u32, primes: &[SplitPrime]) -> Vec<BigInt> {
    let mut norms: Vec<BigInt> = primes
        .iter()
        .flat_map(|sp| std::iter::repeat_n(BigInt::from(sp.p), r as usize + 1))
        .collect();
    norms.sort();
    norms
}

/// Smallest t such that every set of t ideals has norm product above
/// `C_α (M^(s+1) - 1)^(r+1)`.
///
/// The t smallest norms have the smallest product among all t-subsets, so
/// it is enough to scan ascending prefixes.
pub fn compute_m(
    field: &NumberField,
    r: u32,
    s: u32,
    radix: &BigUint,
    primes: &[SplitPrime],
) -> Result<usize> {
    let bound = field.norm_bound(&radix.pow(s + 1));
    let mut acc = BigInt::one();
    for (t, norm) in ideal_norms(r, primes).iter().enumerate() {
        acc *= norm;
        if acc > bound {
            return Ok(t + 1);
        }
    }
    Err(Error::Unsatisfiable)
}

/// Audit version of [`compute_m`] enumerating all subsets of ideals.
pub fn compute_m_exhaustive(
    field: &NumberField,
    r: u32,
    s: u32,
    radix: &BigUint,
    primes: &[SplitPrime],
) -> Result<usize> {
    let norms = ideal_norms(r, primes);
    if norms.len() > EXHAUSTIVE_M_LIMIT {
        return Err(Error::InvalidParams(format!(
            "{} ideals exceed the exhaustive limit {EXHAUSTIVE_M_LIMIT}",
            norms.len()
        )));
    }
    let bound = field.norm_bound(&radix.pow(s + 1));
    // largest subset whose product stays within the bound
    let mut largest_within = 0usize;
    for mask in 0u32..(1u32 << norms.len()) {
        let size = mask.count_ones() as usize;
        if size <= largest_within {
            continue;
        }
        let prod: BigInt = norms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, n)| n)
            .product();
        if prod <= bound {
            largest_within = size;
        }
    }
    if largest_within == norms.len() {
        return Err(Error::Unsatisfiable);
    }
    Ok(largest_within + 1)
}

/// Distance facts for the ambient code `D(K, M^(s+1), {all ideals})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientDistance {
    /// `n - m + 1`
    pub lower_bound: usize,
    /// Some `m - 1` ideals have norm product below `(M^(s+1))^δ`, so the bound
    /// is attained in the ambient code. Says nothing about the subcode.
    pub tight: bool,
}

pub fn ambient_distance_report(spec: &CodeSpec) -> Result<AmbientDistance> {
    let m = spec.m().ok_or(Error::NotGood {
        margin: margin(spec)?,
    })?;
    let norms = ideal_norms(spec.r, &spec.primes);
    let smallest: BigInt = norms[..m - 1].iter().product();
    let threshold = BigInt::from(spec.coeff_limit()).pow(spec.field.degree() as u32);
    Ok(AmbientDistance {
        lower_bound: spec.n() - m + 1,
        tight: smallest < threshold,
    })
}

/// Exact ratio of the two sides of the good split inequality.
pub fn margin(spec: &CodeSpec) -> Result<BigRational> {
    good_split_check(&spec.field, spec.r, spec.s, &spec.radix, &spec.primes).map(|(_, m)| m)
}

/// Floating-point value of a positive ratio of arbitrary size.
pub fn ratio_approx(q: &BigRational) -> f64 {
    let part = |v: &BigInt| ln(&v.magnitude().clone());
    (part(q.numer()) - part(q.denom())).exp()
}

/// `log #C / log #R = r(s+1) log M / ((r+1) log Π p_i)`.
pub fn rate(spec: &CodeSpec) -> f64 {
    let product: BigUint = spec.primes.iter().map(|sp| BigUint::from(sp.p)).product();
    let num = spec.digits() as f64 * ln(&spec.radix);
    let den = spec.group_len() as f64 * ln(&product);
    num / den
}

/// Parameters of the family `C_ℓ = C(r, s, K, M_ℓ, {p_1..p_ℓ})` with
/// `M_ℓ = ⌊(k P_ℓ / P_⌊cℓ⌋)^(1/(s+1))⌋`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams {
    field: Arc<NumberField>,
    r: u32,
    s: u32,
    c: BigRational,
    k: BigRational,
}

impl FamilyParams {
    /// Requires `0 < c < 1`, `k > 0` and `k^(r+1) C_α < 1`.
    pub fn new(field: Arc<NumberField>, r: u32, s: u32, c: BigRational, k: BigRational) -> Result<Self> {
        if field.degree() != r as usize + 1 {
            return Err(Error::DegreeMismatch {
                degree: field.degree(),
                expected: r + 1,
            });
        }
        if !c.is_positive() || c >= BigRational::one() {
            return Err(Error::InvalidParams(format!("c = {c} must lie in (0, 1)")));
        }
        if !k.is_positive() {
            return Err(Error::InvalidParams(format!("k = {k} must be positive")));
        }
        let lhs = k.pow(r as i32 + 1) * BigRational::from_integer(field.c_alpha().clone());
        if lhs >= BigRational::one() {
            return Err(Error::InvalidParams(format!(
                "k^(r+1) C_alpha = {lhs} must be below 1"
            )));
        }
        Ok(FamilyParams { field, r, s, c, k })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn k(&self) -> &BigRational {
        &self.k
    }

    /// ⌊cℓ⌋
    pub fn cut(&self, ell: usize) -> usize {
        (&self.c * BigRational::from_integer(BigInt::from(ell)))
            .floor()
            .to_integer()
            .to_usize()
            .unwrap()
    }
}

/// `M_ℓ` for already chosen split primes `p_1 < … < p_ℓ`.
pub fn family_radix(fp: &FamilyParams, primes: &[SplitPrime]) -> BigUint {
    let ell = primes.len();
    let cut = fp.cut(ell);
    // k · P_ℓ / P_⌊cℓ⌋ = k · Π_{i > ⌊cℓ⌋} p_i
    let tail: BigInt = primes[cut..].iter().map(|sp| BigInt::from(sp.p)).product();
    let q = &fp.k * BigRational::from_integer(tail);
    let whole = q.numer().div_floor(q.denom());
    floor_root(&whole.to_biguint().unwrap_or_default(), fp.s + 1)
}

/// Member ℓ of the family on the first ℓ totally split primes.
pub fn design_family(fp: &FamilyParams, ell: usize) -> Result<CodeSpec> {
    if ell == 0 {
        return Err(Error::InvalidParams("l must be positive".into()));
    }
    let primes = next_split_primes(&fp.field, ell, 2)?;
    design_family_on(fp, primes)
}

/// Member of the family on an explicit prime list (the first ℓ split primes
/// for the theorem to apply).
pub fn design_family_on(fp: &FamilyParams, primes: Vec<SplitPrime>) -> Result<CodeSpec> {
    let radix = family_radix(fp, &primes);
    if radix < BigUint::from(2u32) {
        return Err(Error::MTooSmall(radix.into()));
    }
    let spec = CodeSpec::new(Arc::clone(&fp.field), fp.r, fp.s, radix, primes)?;
    if !spec.is_good() {
        return Err(Error::Internal("family member is not a good split code".into()));
    }
    Ok(spec)
}

/// Serialized form of a [`CodeSpec`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeSpecJson {
    pub field: FieldJson,
    pub r: u32,
    pub s: u32,
    #[serde(rename = "M")]
    pub radix: String,
    pub primes: Vec<SplitPrime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<Derived>,
}

impl From<&CodeSpec> for CodeSpecJson {
    fn from(spec: &CodeSpec) -> Self {
        CodeSpecJson {
            field: FieldJson::from(&*spec.field),
            r: spec.r,
            s: spec.s,
            radix: spec.radix.to_string(),
            primes: spec.primes.clone(),
            derived: Some(spec.derived.clone()),
        }
    }
}

impl TryFrom<CodeSpecJson> for CodeSpec {
    type Error = Error;

    fn try_from(j: CodeSpecJson) -> Result<Self> {
        let field = Arc::new(NumberField::try_from(j.field)?);
        let radix: BigUint = j
            .radix
            .trim()
            .parse()
            .map_err(|e| Error::Serde(format!("bad M {:?}: {e}", j.radix)))?;
        let spec = CodeSpec::new(field, j.r, j.s, radix, j.primes)?;
        if let Some(stored) = j.derived {
            if stored != spec.derived {
                return Err(Error::Serde(format!(
                    "derived block {stored:?} does not match recomputed {:?}",
                    spec.derived
                )));
            }
        }
        Ok(spec)
    }
}

impl Serialize for CodeSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CodeSpecJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CodeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CodeSpec::try_from(CodeSpecJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
