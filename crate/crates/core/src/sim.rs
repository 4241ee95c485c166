//! Storage simulator. Node `(group, slot)` holds that coordinate of every
//! stripe; scripted failures trigger local repair when a group has lost a
//! single node and a global decode otherwise.
//!
//! Repairs are instantaneous: a node repaired at time `t` is healthy again at
//! `t`. A decode that cannot succeed is counted as unrecoverable and retried
//! whenever later events change the set of live nodes. Counts are per stripe,
//! so one local repair of a node holding `S` stripes adds `S` repairs and
//! `r·S` symbol reads.

use std::collections::BTreeSet;

use num_bigint::RandBigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::pool;
use crate::code_params::CodeSpec;
use crate::codec::{self, Codeword, MessagePoly};
use crate::error::{Error, Result};

pub type Node = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Fail,
    Restore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub time: u64,
    pub group: usize,
    pub slot: usize,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub spec: CodeSpec,
    pub stripes: u64,
    pub events: Vec<Event>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Fail,
    Restore,
    /// Event with no effect: failing a down node or restoring a live one.
    Ignored,
    LocalRepair,
    GlobalRepair,
    Unrecoverable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub time: u64,
    pub action: Action,
    pub nodes: Vec<Node>,
    pub stripes: u64,
    pub symbols_read: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimReport {
    pub repairs_local: u64,
    pub repairs_global: u64,
    pub symbols_read: u64,
    pub unrecoverable: u64,
    pub log: Vec<LogEntry>,
}

impl SimReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        let (groups, width) = (self.spec.groups(), self.spec.group_len());
        for (k, e) in self.events.iter().enumerate() {
            if e.group >= groups || e.slot >= width {
                return bad(format!("event {k}: node ({}, {}) out of range", e.group, e.slot));
            }
            if k > 0 && e.time < self.events[k - 1].time {
                return bad(format!("event {k}: time goes backwards"));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let sc: Scenario = serde_json::from_str(text)?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// Stripe messages, uniform over the message space, drawn from ChaCha8(seed).
pub fn stripe_messages(spec: &CodeSpec, stripes: u64, seed: u64) -> Result<Vec<MessagePoly>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = spec.size();
    (0..stripes)
        .map(|_| MessagePoly::from_index(spec, &rng.gen_biguint_below(&size)))
        .collect()
}

/// Random fail/restore script: each step fails a live node or, with
/// probability 1/3 (or when everything is down), restores a down one.
pub fn random_scenario(spec: CodeSpec, stripes: u64, steps: usize, seed: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes: Vec<Node> = (0..spec.groups())
        .flat_map(|h| (0..spec.group_len()).map(move |j| (h, j)))
        .collect();
    let mut down: BTreeSet<Node> = BTreeSet::new();
    let mut events = Vec::with_capacity(steps);
    let mut time = 0;
    for _ in 0..steps {
        time += rng.gen_range(0..3u64);
        let restore = !down.is_empty() && (down.len() == nodes.len() || rng.gen_ratio(1, 3));
        let (node, kind) = if restore {
            let pick = rng.gen_range(0..down.len());
            (*down.iter().nth(pick).unwrap(), EventKind::Restore)
        } else {
            let live: Vec<Node> = nodes.iter().copied().filter(|n| !down.contains(n)).collect();
            (live[rng.gen_range(0..live.len())], EventKind::Fail)
        };
        match kind {
            EventKind::Fail => down.insert(node),
            EventKind::Restore => down.remove(&node),
        };
        events.push(Event {
            time,
            group: node.0,
            slot: node.1,
            kind,
        });
    }
    Scenario {
        spec,
        stripes,
        events,
        seed,
    }
}

struct Sim<'a> {
    spec: &'a CodeSpec,
    stripes: Vec<Codeword>,
    down: BTreeSet<Node>,
    report: SimReport,
}

impl Sim<'_> {
    fn log(&mut self, time: u64, action: Action, nodes: Vec<Node>, stripes: u64, symbols_read: u64) {
        self.report.log.push(LogEntry {
            time,
            action,
            nodes,
            stripes,
            symbols_read,
        });
    }

    fn erased(&self, cw: &Codeword) -> Codeword {
        let mut cw = cw.clone();
        for &(h, j) in &self.down {
            cw.erase(h, j);
        }
        cw
    }

    fn repair(&mut self, time: u64) -> Result<()> {
        let spec = self.spec;
        let r = spec.r() as u64;
        let count = self.stripes.len() as u64;
        // groups that lost exactly one node
        let singles: Vec<Node> = (0..spec.groups())
            .filter_map(|h| {
                let mut it = self.down.range((h, 0)..(h + 1, 0));
                match (it.next(), it.next()) {
                    (Some(&node), None) => Some(node),
                    _ => None,
                }
            })
            .collect();
        for node in singles {
            let (h, j) = node;
            let ok = self.stripes.par_iter().all(|cw| {
                let erased = self.erased(cw);
                codec::local_recover(spec, &erased, h, j).ok() == cw.symbol(h, j)
            });
            if !ok {
                return Err(Error::Internal(format!("local repair of ({h}, {j}) disagrees")));
            }
            self.down.remove(&node);
            self.report.repairs_local += count;
            self.report.symbols_read += r * count;
            self.log(time, Action::LocalRepair, vec![node], count, r * count);
        }
        if self.down.is_empty() {
            return Ok(());
        }
        let nodes: Vec<Node> = self.down.iter().copied().collect();
        let outcomes: Vec<Option<u64>> = self
            .stripes
            .par_iter()
            .map(|cw| {
                let erased = self.erased(cw);
                match codec::global_decode(spec, &erased) {
                    Ok(msg) if codec::encode(spec, &msg) == *cw => Ok(Some(read_by_decoder(&erased, spec))),
                    Ok(_) => Err(Error::Internal("global decode returned a different message".into())),
                    Err(Error::InsufficientGlobalData { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        let (mut ok, mut failed, mut read) = (0u64, 0u64, 0u64);
        for o in outcomes {
            match o {
                Some(n) => {
                    ok += 1;
                    read += n;
                }
                None => failed += 1,
            }
        }
        if ok > 0 {
            self.report.repairs_global += ok;
            self.report.symbols_read += read;
            self.log(time, Action::GlobalRepair, nodes.clone(), ok, read);
        }
        if failed > 0 {
            self.report.unrecoverable += failed;
            self.log(time, Action::Unrecoverable, nodes, failed, 0);
        } else {
            self.down.clear();
        }
        Ok(())
    }
}

/// Symbols a global decode reads: every present symbol of the groups it can
/// solve (those with at least `r` present slots).
fn read_by_decoder(cw: &Codeword, spec: &CodeSpec) -> u64 {
    (0..cw.groups())
        .map(|h| cw.present_in_group(h))
        .filter(|&n| n >= spec.r() as usize)
        .sum::<usize>() as u64
}

pub fn run_scenario(sc: &Scenario, threads: usize) -> Result<SimReport> {
    sc.validate()?;
    let spec = &sc.spec;
    let msgs = stripe_messages(spec, sc.stripes, sc.seed)?;
    pool(threads)?.install(|| {
        let mut sim = Sim {
            spec,
            stripes: codec::encode_many(spec, &msgs),
            down: BTreeSet::new(),
            report: SimReport {
                repairs_local: 0,
                repairs_global: 0,
                symbols_read: 0,
                unrecoverable: 0,
                log: Vec::new(),
            },
        };
        let mut k = 0;
        while k < sc.events.len() {
            let time = sc.events[k].time;
            let mut changed = false;
            while k < sc.events.len() && sc.events[k].time == time {
                let e = sc.events[k];
                let node = (e.group, e.slot);
                let action = match e.kind {
                    EventKind::Fail if sim.down.insert(node) => Action::Fail,
                    EventKind::Restore if sim.down.remove(&node) => Action::Restore,
                    _ => Action::Ignored,
                };
                changed |= action != Action::Ignored;
                sim.log(time, action, vec![node], 0, 0);
                k += 1;
            }
            if changed && !sim.down.is_empty() {
                sim.repair(time)?;
            }
        }
        Ok(sim.report)
    })
}
