//! Encoding `A[M] → Π F_{p_i}^(r+1)`, single-symbol local repair, and
//! group-aligned erasure decoding.
//!
//! A message `x = Σ_{i<r} u_i α^i` with `u_i = Σ_j a_{i,j} M^j` is sent to the
//! residues `x mod (p_h, α - β_j)`, i.e. `Σ_i u_i β_j^i mod p_h`. Slot `j` of
//! group `h` is the `j`-th ascending root.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigmath::crt;
use crate::code_params::CodeSpec;
use crate::error::{Error, Result};
use crate::fp;
use crate::number_field::AlgebraicInt;

/// Base-M digits `a_{i,j}`, `i < r`, `j ≤ s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MessagePoly {
    digits: Vec<Vec<BigUint>>,
}

impl MessagePoly {
    pub fn new(spec: &CodeSpec, digits: Vec<Vec<BigUint>>) -> Result<Self> {
        let ok_shape = digits.len() == spec.r() as usize
            && digits.iter().all(|row| row.len() == spec.s() as usize + 1);
        if !ok_shape {
            return Err(Error::InvalidParams(format!(
                "message must be {} x {} digits",
                spec.r(),
                spec.s() + 1
            )));
        }
        if digits.iter().flatten().any(|d| d >= spec.radix()) {
            return Err(Error::InvalidParams("digit not below M".into()));
        }
        Ok(MessagePoly { digits })
    }

    pub fn zero(spec: &CodeSpec) -> Self {
        MessagePoly {
            digits: vec![vec![BigUint::zero(); spec.s() as usize + 1]; spec.r() as usize],
        }
    }

    /// Message from its coefficients `u_0..u_{r-1}`, each below `M^(s+1)`.
    pub fn from_coeffs(spec: &CodeSpec, coeffs: &[BigUint]) -> Result<Self> {
        if coeffs.len() != spec.r() as usize {
            return Err(Error::InvalidParams(format!("need {} coefficients", spec.r())));
        }
        let limit = spec.coeff_limit();
        let mut digits = Vec::with_capacity(coeffs.len());
        for u in coeffs {
            if *u >= limit {
                return Err(Error::OutOfRange);
            }
            digits.push(to_radix(u.clone(), spec.radix(), spec.s() as usize + 1));
        }
        Ok(MessagePoly { digits })
    }

    /// The message with enumeration index `idx`: digit `t = i(s+1) + j` carries
    /// weight `M^t`.
    pub fn from_index(spec: &CodeSpec, idx: &BigUint) -> Result<Self> {
        if *idx >= spec.size() {
            return Err(Error::OutOfRange);
        }
        let flat = to_radix(idx.clone(), spec.radix(), spec.digits());
        Ok(Self::from_flat(spec, flat))
    }

    fn from_flat(spec: &CodeSpec, flat: Vec<BigUint>) -> Self {
        let w = spec.s() as usize + 1;
        MessagePoly {
            digits: flat.chunks(w).map(<[BigUint]>::to_vec).collect(),
        }
    }

    pub fn index(&self, radix: &BigUint) -> BigUint {
        from_radix(self.digits.iter().flatten(), radix)
    }

    pub fn digits(&self) -> &[Vec<BigUint>] {
        &self.digits
    }

    /// `u_i = Σ_j a_{i,j} M^j`.
    pub fn coeffs(&self, radix: &BigUint) -> Vec<BigUint> {
        self.digits.iter().map(|row| from_radix(row.iter(), radix)).collect()
    }

    /// The algebraic integer `Σ u_i α^i` (top coefficient zero).
    pub fn to_algebraic(&self, spec: &CodeSpec) -> AlgebraicInt {
        let mut coeffs: Vec<num_bigint::BigInt> = self
            .coeffs(spec.radix())
            .into_iter()
            .map(Into::into)
            .collect();
        coeffs.push(Zero::zero());
        spec.field()
            .element(coeffs)
            .expect("r + 1 coefficients match the degree")
    }
}

/// Little-endian base-`radix` digits, exactly `len` of them.
fn to_radix(mut x: BigUint, radix: &BigUint, len: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(&x % radix);
        x /= radix;
    }
    debug_assert!(x.is_zero());
    out
}

fn from_radix<'a>(digits: impl DoubleEndedIterator<Item = &'a BigUint>, radix: &BigUint) -> BigUint {
    digits.rev().fold(BigUint::zero(), |acc, d| acc * radix + d)
}

/// Usable bits per codeword, `⌊r(s+1) log2 M⌋`, including the pad bit.
pub fn capacity_bits(spec: &CodeSpec) -> u64 {
    spec.size().bits() - 1
}

/// Whole payload bytes one codeword can carry.
pub fn capacity_bytes(spec: &CodeSpec) -> usize {
    (capacity_bits(spec).saturating_sub(1) / 8) as usize
}

/// Pack bytes into a message: the bit string `data ‖ 1 ‖ 0…0` of exactly
/// [`capacity_bits`] bits, read as a big-endian integer, becomes the
/// enumeration index.
pub fn msg_from_bytes(spec: &CodeSpec, data: &[u8]) -> Result<MessagePoly> {
    let capacity = capacity_bits(spec);
    let bits = data.len() as u64 * 8;
    if bits + 1 > capacity {
        return Err(Error::CapacityExceeded { bits: bits + 1, capacity });
    }
    let mut x = BigUint::from_bytes_be(data);
    x = (x << 1u32) | BigUint::one();
    x <<= capacity - bits - 1;
    MessagePoly::from_index(spec, &x)
}

/// Inverse of [`msg_from_bytes`].
pub fn msg_to_bytes(spec: &CodeSpec, msg: &MessagePoly) -> Result<Vec<u8>> {
    let capacity = capacity_bits(spec);
    let x = msg.index(spec.radix());
    if x.bits() > capacity || x.is_zero() {
        return Err(Error::Malformed("message carries no pad marker".into()));
    }
    let trailing = x.trailing_zeros().unwrap_or(0);
    let data_bits = capacity - trailing - 1;
    if !data_bits.is_multiple_of(8) {
        return Err(Error::Malformed("payload is not a whole number of bytes".into()));
    }
    let payload = x >> (trailing + 1);
    let mut bytes = payload.to_bytes_be();
    if payload.is_zero() {
        bytes.clear();
    }
    let len = (data_bits / 8) as usize;
    let mut out = vec![0u8; len - bytes.len()];
    out.extend(bytes);
    Ok(out)
}

/// One stripe: `ℓ` groups of `r + 1` residues with a presence mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Codeword {
    moduli: Vec<u64>,
    symbols: Vec<Vec<u64>>,
    present: Vec<Vec<bool>>,
}

impl Codeword {
    /// Fully present codeword; every symbol must be below its modulus.
    pub fn new(moduli: Vec<u64>, symbols: Vec<Vec<u64>>) -> Result<Self> {
        let present = symbols.iter().map(|g| vec![true; g.len()]).collect();
        Self::with_mask(moduli, symbols, present)
    }

    pub fn with_mask(moduli: Vec<u64>, symbols: Vec<Vec<u64>>, present: Vec<Vec<bool>>) -> Result<Self> {
        if symbols.len() != moduli.len() || present.len() != moduli.len() {
            return Err(Error::Malformed("group count mismatch".into()));
        }
        let width = symbols.first().map_or(0, Vec::len);
        for ((p, g), mask) in moduli.iter().zip(&symbols).zip(&present) {
            if g.len() != width || mask.len() != width {
                return Err(Error::Malformed("ragged groups".into()));
            }
            if g.iter().zip(mask).any(|(&c, &on)| on && c >= *p) {
                return Err(Error::Malformed(format!("symbol not below {p}")));
            }
        }
        Ok(Codeword { moduli, symbols, present })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn symbols(&self) -> &[Vec<u64>] {
        &self.symbols
    }

    pub fn mask(&self) -> &[Vec<bool>] {
        &self.present
    }

    pub fn groups(&self) -> usize {
        self.moduli.len()
    }

    pub fn group_len(&self) -> usize {
        self.symbols.first().map_or(0, Vec::len)
    }

    pub fn symbol(&self, group: usize, slot: usize) -> Option<u64> {
        self.present[group][slot].then(|| self.symbols[group][slot])
    }

    pub fn is_present(&self, group: usize, slot: usize) -> bool {
        self.present[group][slot]
    }

    pub fn is_complete(&self) -> bool {
        self.present.iter().flatten().all(|&b| b)
    }

    /// Mark a slot missing; its stored value becomes 0.
    pub fn erase(&mut self, group: usize, slot: usize) {
        self.present[group][slot] = false;
        self.symbols[group][slot] = 0;
    }

    pub fn restore(&mut self, group: usize, slot: usize, value: u64) {
        self.present[group][slot] = true;
        self.symbols[group][slot] = value;
    }

    pub fn present_in_group(&self, group: usize) -> usize {
        self.present[group].iter().filter(|&&b| b).count()
    }

    /// Flattened symbols, group-major.
    pub fn flat(&self) -> Vec<u64> {
        self.symbols.iter().flatten().copied().collect()
    }
}

/// Number of coordinates where two equal-length words differ.
pub fn hamming(a: &[u64], b: &[u64]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn check_shape(spec: &CodeSpec, cw: &Codeword) -> Result<()> {
    if cw.moduli != spec.moduli() || cw.group_len() != spec.group_len() {
        return Err(Error::Malformed("codeword does not match the code parameters".into()));
    }
    Ok(())
}

/// `c_j^(h) = Σ_{t<r} (u_t mod p_h) β_j^t mod p_h`.
pub fn encode(spec: &CodeSpec, msg: &MessagePoly) -> Codeword {
    let coeffs = msg.coeffs(spec.radix());
    encode_coeffs(spec, &coeffs)
}

fn encode_coeffs(spec: &CodeSpec, coeffs: &[BigUint]) -> Codeword {
    let symbols = spec
        .primes()
        .iter()
        .map(|sp| {
            let residues: Vec<u64> = coeffs
                .iter()
                .map(|u| (u % sp.p).to_u64().unwrap())
                .collect();
            sp.roots.iter().map(|&beta| fp::eval(&residues, beta, sp.p)).collect()
        })
        .collect();
    Codeword::new(spec.moduli(), symbols).expect("encoder output is well formed")
}

/// Encode many messages in parallel on the current rayon pool.
pub fn encode_many(spec: &CodeSpec, msgs: &[MessagePoly]) -> Vec<Codeword> {
    msgs.par_iter().map(|m| encode(spec, m)).collect()
}

/// Solve the Vandermonde system `Σ_t x_t β_k^t = c_k` over F_p.
pub fn solve_vandermonde(betas: &[u64], values: &[u64], p: u64) -> Vec<u64> {
    let n = betas.len();
    debug_assert_eq!(values.len(), n);
    let mut rows: Vec<Vec<u64>> = betas
        .iter()
        .zip(values)
        .map(|(&b, &v)| {
            let mut row = Vec::with_capacity(n + 1);
            let mut pw = 1 % p;
            for _ in 0..n {
                row.push(pw);
                pw = fp::mul_mod(pw, b, p);
            }
            row.push(v % p);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| rows[r][col] != 0)
            .expect("Vandermonde matrix with distinct nodes is invertible");
        rows.swap(col, pivot);
        let inv = fp::inv_mod(rows[col][col], p);
        for v in rows[col].iter_mut() {
            *v = fp::mul_mod(*v, inv, p);
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let factor = row[col];
            if r == col || factor == 0 {
                continue;
            }
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = fp::sub_mod(*x, fp::mul_mod(factor, y, p), p);
            }
        }
    }
    rows.into_iter().map(|row| row[n]).collect()
}

/// Solve group `group` for `(u_0 .. u_{r-1}) mod p` from its first `r` present
/// slots other than `skip`. Returns the solution and the slots used.
fn solve_group(spec: &CodeSpec, cw: &Codeword, group: usize, skip: Option<usize>) -> Result<(Vec<u64>, Vec<usize>)> {
    let r = spec.r() as usize;
    let sp = &spec.primes()[group];
    let slots: Vec<usize> = (0..spec.group_len())
        .filter(|&j| Some(j) != skip && cw.is_present(group, j))
        .collect();
    if slots.len() < r {
        return Err(Error::InsufficientLocalData {
            group,
            present: slots.len(),
            needed: r,
        });
    }
    let used = &slots[..r];
    let betas: Vec<u64> = used.iter().map(|&j| sp.roots[j]).collect();
    let values: Vec<u64> = used.iter().map(|&j| cw.symbols[group][j]).collect();
    Ok((solve_vandermonde(&betas, &values, sp.p), slots))
}

/// Recover slot `slot` of group `group` from the other `r` slots of that group.
pub fn local_recover(spec: &CodeSpec, cw: &Codeword, group: usize, slot: usize) -> Result<u64> {
    check_shape(spec, cw)?;
    if group >= spec.groups() || slot >= spec.group_len() {
        return Err(Error::InvalidParams(format!("no slot ({group}, {slot})")));
    }
    let (u, _) = solve_group(spec, cw, group, Some(slot))?;
    let sp = &spec.primes()[group];
    Ok(fp::eval(&u, sp.roots[slot], sp.p))
}

/// Erasure decoding for group-aligned patterns.
///
/// Every group with at least `r` present slots is solved for the residues of
/// `u_0..u_{r-1}`; a spare slot must agree. If the product of the solved
/// groups' primes exceeds `M^(s+1)` the coefficients are reconstructed by CRT,
/// range-checked, and the result is re-encoded against every present symbol.
pub fn global_decode(spec: &CodeSpec, cw: &Codeword) -> Result<MessagePoly> {
    check_shape(spec, cw)?;
    let r = spec.r() as usize;
    let mut moduli = Vec::new();
    let mut residues: Vec<Vec<u64>> = vec![Vec::new(); r];
    for (h, sp) in spec.primes().iter().enumerate() {
        let (u, slots) = match solve_group(spec, cw, h, None) {
            Ok(found) => found,
            Err(Error::InsufficientLocalData { .. }) => continue,
            Err(e) => return Err(e),
        };
        for &j in &slots[r..] {
            if fp::eval(&u, sp.roots[j], sp.p) != cw.symbols[h][j] {
                return Err(Error::Inconsistent(format!(
                    "group {h} slot {j} disagrees with the other slots"
                )));
            }
        }
        moduli.push(sp.p);
        for (t, v) in u.into_iter().enumerate() {
            residues[t].push(v);
        }
    }
    let covered: BigUint = moduli.iter().map(|&p| BigUint::from(p)).product();
    let limit = spec.coeff_limit();
    if covered <= limit {
        return Err(Error::InsufficientGlobalData {
            covered: covered.into(),
            needed: limit.into(),
        });
    }
    let coeffs = residues
        .iter()
        .map(|res| {
            let u = crt(res, &moduli);
            if u >= limit {
                Err(Error::OutOfRange)
            } else {
                Ok(u)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let reencoded = encode_coeffs(spec, &coeffs);
    for h in 0..spec.groups() {
        for j in 0..spec.group_len() {
            if cw.is_present(h, j) && cw.symbols[h][j] != reencoded.symbols[h][j] {
                return Err(Error::Inconsistent(format!(
                    "group {h} slot {j} disagrees with the decoded message"
                )));
            }
        }
    }
    MessagePoly::from_coeffs(spec, &coeffs)
}

/// A fully present word is a codeword iff it decodes and re-encodes to itself.
pub fn verify(spec: &CodeSpec, cw: &Codeword) -> bool {
    if !cw.is_complete() {
        return false;
    }
    match global_decode(spec, cw) {
        Ok(msg) => encode(spec, &msg) == *cw,
        Err(_) => false,
    }
}
