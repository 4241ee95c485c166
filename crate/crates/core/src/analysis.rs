//! Exhaustive oracles over the whole code: minimum distance, injectivity and
//! locality. All scans are parallel but reduce deterministically, so reports
//! do not depend on the thread count.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code_params::CodeSpec;
use crate::codec::{self, hamming, Codeword, MessagePoly};
use crate::error::{Error, Result};

/// Largest code enumerated without `force`.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    /// Worker threads; 0 means the rayon default.
    pub threads: usize,
    /// Skip the size guard.
    pub force: bool,
}

impl Options {
    pub fn threads(threads: usize) -> Self {
        Options { threads, force: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub min_distance: usize,
    /// `n - m + 1`, absent when no `m` exists.
    pub lower_bound: Option<usize>,
    /// Enumeration indices of the lexicographically first pair at minimum distance.
    pub witness_pair: (u64, u64),
    pub enumerated: u64,
}

impl DistanceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub recoveries: u64,
    pub mismatches: u64,
}

pub(crate) fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

/// Number of messages, checked against the size guard.
pub fn message_count(spec: &CodeSpec, force: bool) -> Result<u64> {
    let size = spec.size();
    let too_large = |limit| Error::TooLarge {
        count: size.clone().into(),
        limit,
    };
    if !force && size > BigUint::from(ENUMERATION_LIMIT) {
        return Err(too_large(ENUMERATION_LIMIT));
    }
    // even forced, the codewords have to fit in memory
    size.to_u64()
        .filter(|&c| usize::try_from(c).is_ok())
        .ok_or_else(|| too_large(usize::MAX as u64))
}

/// Every codeword in enumeration order, flattened.
pub fn enumerate_codewords(spec: &CodeSpec, opts: Options) -> Result<Vec<Vec<u64>>> {
    let count = message_count(spec, opts.force)?;
    pool(opts.threads)?.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let msg = MessagePoly::from_index(spec, &BigUint::from(i))?;
                Ok(codec::encode(spec, &msg).flat())
            })
            .collect()
    })
}

/// Minimum pairwise Hamming distance with the lexicographically first
/// minimizing pair `(i, j)`, `i < j`. `None` for fewer than two words.
pub fn pairwise_min(words: &[Vec<u64>], threads: usize) -> Result<Option<(usize, usize, usize)>> {
    let best = pool(threads)?.install(|| {
        (0..words.len())
            .into_par_iter()
            .filter_map(|i| {
                let mut best: Option<(usize, usize)> = None;
                for j in i + 1..words.len() {
                    let d = hamming(&words[i], &words[j]);
                    if best.is_none_or(|(bd, _)| d < bd) {
                        best = Some((d, j));
                    }
                }
                best.map(|(d, j)| (d, i, j))
            })
            .min()
    });
    Ok(best)
}

pub fn brute_min_distance(spec: &CodeSpec, opts: Options) -> Result<DistanceReport> {
    let words = enumerate_codewords(spec, opts)?;
    let (min_distance, i, j) = pairwise_min(&words, opts.threads)?
        .ok_or_else(|| Error::Internal("code has fewer than two messages".into()))?;
    Ok(DistanceReport {
        min_distance,
        lower_bound: spec.dist_lb(),
        witness_pair: (i as u64, j as u64),
        enumerated: words.len() as u64,
    })
}

/// Number of distinct codewords.
pub fn distinct_codewords(spec: &CodeSpec, opts: Options) -> Result<u64> {
    let mut words = enumerate_codewords(spec, opts)?;
    pool(opts.threads)?.install(|| words.par_sort_unstable());
    words.dedup();
    Ok(words.len() as u64)
}

pub fn brute_injectivity(spec: &CodeSpec, opts: Options) -> Result<bool> {
    Ok(distinct_codewords(spec, opts)? == message_count(spec, opts.force)?)
}

/// Erase each slot of `cw` in turn and recover it locally; counts the
/// recoveries that fail or disagree with the original symbol.
pub fn locality_check(spec: &CodeSpec, cw: &Codeword) -> LocalityReport {
    let mut report = LocalityReport { recoveries: 0, mismatches: 0 };
    for h in 0..cw.groups() {
        for j in 0..cw.group_len() {
            let mut erased = cw.clone();
            erased.erase(h, j);
            report.recoveries += 1;
            if codec::local_recover(spec, &erased, h, j).ok() != cw.symbol(h, j) {
                report.mismatches += 1;
            }
        }
    }
    report
}

pub fn locality_report(spec: &CodeSpec, opts: Options) -> Result<LocalityReport> {
    let count = message_count(spec, opts.force)?;
    pool(opts.threads)?.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let msg = MessagePoly::from_index(spec, &BigUint::from(i))?;
                Ok(locality_check(spec, &codec::encode(spec, &msg)))
            })
            .try_reduce(
                || LocalityReport { recoveries: 0, mismatches: 0 },
                |a, b| {
                    Ok(LocalityReport {
                        recoveries: a.recoveries + b.recoveries,
                        mismatches: a.mismatches + b.mismatches,
                    })
                },
            )
    })
}

pub fn locality_exhaustive(spec: &CodeSpec, opts: Options) -> Result<bool> {
    Ok(locality_report(spec, opts)?.mismatches == 0)
}
