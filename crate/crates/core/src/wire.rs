//! Binary codeword records.
//!
//! ```text
//! "NFLC" | version u8 | ℓ u16 | r u8
//! ℓ × ( p u64 | (r+1) × symbol, ⌈bits(p)/8⌉ bytes each )
//! mask: ℓ(r+1) bits, group-major, MSB first, zero-padded to a byte
//! ```
//!
//! All integers are big-endian. Erased symbols are written as zero. A file is
//! a concatenation of records.

use crate::codec::Codeword;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"NFLC";
pub const VERSION: u8 = 1;

fn symbol_width(p: u64) -> usize {
    let bits = 64 - p.leading_zeros() as usize;
    bits.div_ceil(8).max(1)
}

pub fn write_codeword(cw: &Codeword, out: &mut Vec<u8>) -> Result<()> {
    let groups = u16::try_from(cw.groups()).map_err(|_| Error::Malformed("too many groups".into()))?;
    let r = cw
        .group_len()
        .checked_sub(1)
        .and_then(|r| u8::try_from(r).ok())
        .ok_or_else(|| Error::Malformed("group length must be 1..=256".into()))?;
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&groups.to_be_bytes());
    out.push(r);
    for (h, &p) in cw.moduli().iter().enumerate() {
        out.extend_from_slice(&p.to_be_bytes());
        let w = symbol_width(p);
        for &c in &cw.symbols()[h] {
            out.extend_from_slice(&c.to_be_bytes()[8 - w..]);
        }
    }
    let mut byte = 0u8;
    let mut filled = 0;
    for &bit in cw.mask().iter().flatten() {
        byte = (byte << 1) | bit as u8;
        filled += 1;
        if filled == 8 {
            out.push(byte);
            byte = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push(byte << (8 - filled));
    }
    Ok(())
}

pub fn to_bytes(cws: &[Codeword]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for cw in cws {
        write_codeword(cw, &mut out)?;
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Malformed("truncated record".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn uint(&mut self, n: usize) -> Result<u64> {
        Ok(self.take(n)?.iter().fold(0u64, |acc, &b| (acc << 8) | b as u64))
    }
}

/// Parse one record; returns it with the number of bytes consumed.
pub fn read_codeword(buf: &[u8]) -> Result<(Codeword, usize)> {
    let mut rd = Reader { buf, pos: 0 };
    if rd.take(4)? != MAGIC {
        return Err(Error::Malformed("bad magic".into()));
    }
    let version = rd.uint(1)? as u8;
    if version != VERSION {
        return Err(Error::Malformed(format!("unsupported version {version}")));
    }
    let groups = rd.uint(2)? as usize;
    let width = rd.uint(1)? as usize + 1;
    let mut moduli = Vec::with_capacity(groups);
    let mut symbols = Vec::with_capacity(groups);
    for _ in 0..groups {
        let p = rd.uint(8)?;
        if p < 2 {
            return Err(Error::Malformed(format!("modulus {p}")));
        }
        let w = symbol_width(p);
        let group = (0..width).map(|_| rd.uint(w)).collect::<Result<Vec<_>>>()?;
        moduli.push(p);
        symbols.push(group);
    }
    let total = groups * width;
    let mask_bytes = rd.take(total.div_ceil(8))?;
    let bit = |i: usize| mask_bytes[i / 8] >> (7 - i % 8) & 1 == 1;
    if (total..mask_bytes.len() * 8).any(bit) {
        return Err(Error::Malformed("nonzero mask padding".into()));
    }
    let present: Vec<Vec<bool>> = (0..groups)
        .map(|h| (0..width).map(|j| bit(h * width + j)).collect())
        .collect();
    for (g, mask) in symbols.iter().zip(&present) {
        if g.iter().zip(mask).any(|(&c, &on)| !on && c != 0) {
            return Err(Error::Malformed("erased symbol is not zero".into()));
        }
    }
    let cw = Codeword::with_mask(moduli, symbols, present)?;
    Ok((cw, rd.pos))
}

/// Parse a whole file of records.
pub fn from_bytes(mut buf: &[u8]) -> Result<Vec<Codeword>> {
    let mut out = Vec::new();
    while !buf.is_empty() {
        let (cw, used) = read_codeword(buf)?;
        out.push(cw);
        buf = &buf[used..];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> Codeword {
        let mut cw = Codeword::new(
            vec![17, 31, 47],
            vec![vec![5, 8, 9, 12], vec![5, 14, 17, 26], vec![3, 18, 29, 44]],
        )
        .unwrap();
        cw.erase(1, 2);
        cw
    }

    #[test]
    fn layout() {
        let mut buf = Vec::new();
        write_codeword(&sample(), &mut buf).unwrap();
        assert_eq!(&buf[..8], b"NFLC\x01\x00\x03\x03");
        assert_eq!(&buf[8..16], &17u64.to_be_bytes());
        assert_eq!(&buf[16..20], &[5, 8, 9, 12]);
        // 8 header + 3 × (8 + 4) + 2 mask bytes
        assert_eq!(buf.len(), 8 + 36 + 2);
        assert_eq!(&buf[44..], &[0b1111_1101, 0b1111_0000]);
    }

    #[test]
    fn rejects_bad_input() {
        let mut buf = Vec::new();
        write_codeword(&sample(), &mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(read_codeword(&bad).is_err());
        let mut bad = buf.clone();
        bad[4] = 2;
        assert!(read_codeword(&bad).is_err());
        assert!(read_codeword(&buf[..buf.len() - 1]).is_err());
        let mut bad = buf.clone();
        *bad.last_mut().unwrap() |= 1;
        assert!(read_codeword(&bad).is_err());
        let mut bad = buf.clone();
        bad[16] = 17; // symbol equal to its modulus
        assert!(read_codeword(&bad).is_err());
    }

    #[test]
    fn multi_record_file() {
        let a = sample();
        let b = Codeword::new(vec![65537], vec![vec![65536, 0]]).unwrap();
        let bytes = to_bytes(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(from_bytes(&bytes).unwrap(), vec![a, b]);
    }

    fn codeword_strategy() -> impl Strategy<Value = Codeword> {
        (1usize..5, 1usize..6).prop_flat_map(|(groups, width)| {
            prop::collection::vec(
                (2u64..u64::MAX).prop_flat_map(move |p| {
                    (
                        Just(p),
                        prop::collection::vec((0..p, any::<bool>()), width),
                    )
                }),
                groups,
            )
            .prop_map(|gs| {
                let moduli = gs.iter().map(|g| g.0).collect();
                let symbols = gs
                    .iter()
                    .map(|g| g.1.iter().map(|&(c, on)| if on { c } else { 0 }).collect())
                    .collect();
                let mask = gs.iter().map(|g| g.1.iter().map(|&(_, on)| on).collect()).collect();
                Codeword::with_mask(moduli, symbols, mask).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip(cw in codeword_strategy()) {
            let mut buf = Vec::new();
            write_codeword(&cw, &mut buf).unwrap();
            let (back, used) = read_codeword(&buf).unwrap();
            prop_assert_eq!(used, buf.len());
            prop_assert_eq!(back, cw);
        }
    }
}
