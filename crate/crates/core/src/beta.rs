//! Beta-sets (Maya diagrams) of partitions, residue splitting and the
//! global sign of a full m-strip removal.
//!
//! A partition λ is encoded by `S_λ = { λ_i - i : i ≥ 1 }`. Only finitely many
//! nonnegative positions are occupied and only finitely many negative
//! positions are empty; the charge condition requires those two counts to be
//! equal. Removing a border strip of length k is a single particle jumping
//! from `p` to `p - k`, and the strip height is the number of particles it
//! jumps over.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Charge-zero beta-set of a partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BetaSet {
    /// Occupied positions `≥ 0`.
    positives: BTreeSet<i64>,
    /// Empty positions `< 0`.
    holes: BTreeSet<i64>,
}

impl BetaSet {
    /// Rejects out-of-range entries and sets violating the charge condition.
    pub fn new(positives: BTreeSet<i64>, holes: BTreeSet<i64>) -> Result<Self> {
        if let Some(&p) = positives.iter().next() {
            if p < 0 {
                return Err(Error::InvalidQuery(format!(
                    "particle {p} listed as nonnegative"
                )));
            }
        }
        if let Some(&h) = holes.iter().next_back() {
            if h >= 0 {
                return Err(Error::InvalidQuery(format!("hole {h} listed as negative")));
            }
        }
        if positives.len() != holes.len() {
            return Err(Error::ChargeViolation {
                positives: positives.len(),
                holes: holes.len(),
            });
        }
        Ok(BetaSet { positives, holes })
    }

    /// Normalizes an arbitrary-charge configuration given by its occupied
    /// positions at or above `floor` (everything below `floor` occupied) by
    /// shifting it to charge zero.
    pub fn from_window(occupied: &BTreeSet<i64>, floor: i64) -> Self {
        let window = Abacus {
            occupied: occupied.iter().copied().filter(|&q| q >= floor).collect(),
            floor,
        };
        window.to_partition().to_beta()
    }

    pub fn positives(&self) -> &BTreeSet<i64> {
        &self.positives
    }

    pub fn holes(&self) -> &BTreeSet<i64> {
        &self.holes
    }

    pub fn contains(&self, pos: i64) -> bool {
        if pos >= 0 {
            self.positives.contains(&pos)
        } else {
            !self.holes.contains(&pos)
        }
    }

    /// Occupied positions from the top down to `low` inclusive.
    pub fn elements_down_to(&self, low: i64) -> Vec<i64> {
        let top = self.positives.iter().next_back().copied().unwrap_or(-1);
        (low..=top).rev().filter(|&q| self.contains(q)).collect()
    }

    pub fn to_partition(&self) -> Partition {
        let low = self.holes.iter().next().copied().unwrap_or(0).min(0) - 1;
        let parts = self
            .elements_down_to(low)
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s + i as i64 + 1) as usize)
            .filter(|&p| p > 0)
            .collect();
        Partition::new(parts).expect("charge-zero beta-set decodes to a partition")
    }

    /// Residue classes `S_i = { a : m·a + i ∈ S }`, before any charge check.
    fn residue_classes(&self, m: usize) -> Vec<(BTreeSet<i64>, BTreeSet<i64>)> {
        let m = m as i64;
        let mut classes = vec![(BTreeSet::new(), BTreeSet::new()); m as usize];
        for &p in &self.positives {
            classes[p.rem_euclid(m) as usize].0.insert(p.div_euclid(m));
        }
        for &h in &self.holes {
            classes[h.rem_euclid(m) as usize].1.insert(h.div_euclid(m));
        }
        classes
    }
}

impl Partition {
    pub fn to_beta(&self) -> BetaSet {
        let len = self.len() as i64;
        let positives = (1..=len)
            .map(|i| self.part(i as usize - 1) as i64 - i)
            .filter(|&s| s >= 0)
            .collect();
        // Negative positions down to -len that are not of the form λ_i - i.
        let occupied: BTreeSet<i64> = (1..=len)
            .map(|i| self.part(i as usize - 1) as i64 - i)
            .collect();
        let holes = (-len..0).filter(|q| !occupied.contains(q)).collect();
        BetaSet { positives, holes }
    }
}

pub fn to_beta(p: &Partition) -> BetaSet {
    p.to_beta()
}

pub fn from_beta(b: &BetaSet) -> Partition {
    b.to_partition()
}

/// The m-split of θ: component `i` is the partition of residue class `i`.
/// `None` when some class violates the charge condition.
pub fn m_split(theta: &Partition, m: usize) -> Result<Option<Vec<Partition>>> {
    if m < 2 {
        return Err(Error::InvalidModulus { m, min: 2 });
    }
    let classes = theta.to_beta().residue_classes(m);
    let mut out = Vec::with_capacity(m);
    for (positives, holes) in classes {
        match BetaSet::new(positives, holes) {
            Ok(b) => out.push(b.to_partition()),
            Err(Error::ChargeViolation { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(out))
}

pub fn is_splittable(theta: &Partition, m: usize) -> bool {
    matches!(m_split(theta, m), Ok(Some(_)))
}

/// Which removable m-strip to take next when peeling θ down to nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemovalOrder {
    /// Always jump the particle with the largest source position.
    LargestFirst,
    SmallestFirst,
    /// Pseudo-random choice driven by a fixed seed.
    Seeded(u64),
}

/// `sgn_θ`: parity of inter-class jump-overs in a full removal of θ by
/// strips of length m, using the greedy largest-source order.
pub fn sign_theta(theta: &Partition, m: usize) -> Result<i8> {
    sign_theta_by(theta, m, RemovalOrder::LargestFirst)
}

pub fn sign_theta_by(theta: &Partition, m: usize, order: RemovalOrder) -> Result<i8> {
    if !is_splittable(theta, m) {
        return Err(Error::NotSplittable {
            theta: theta.clone(),
            m,
        });
    }
    let mut abacus = Abacus::new(theta, m);
    let step = m as i64;
    let mut rng = match order {
        RemovalOrder::Seeded(seed) => seed | 1,
        _ => 0,
    };
    let mut inter = 0usize;
    loop {
        let sources = abacus.jump_sources(step);
        if sources.is_empty() {
            break;
        }
        let p = match order {
            RemovalOrder::LargestFirst => *sources.last().unwrap(),
            RemovalOrder::SmallestFirst => sources[0],
            RemovalOrder::Seeded(_) => {
                // xorshift64
                rng ^= rng << 13;
                rng ^= rng >> 7;
                rng ^= rng << 17;
                sources[(rng % sources.len() as u64) as usize]
            }
        };
        let class = p.rem_euclid(step);
        inter += abacus
            .between(p - step, p)
            .filter(|q| q.rem_euclid(step) != class)
            .count();
        abacus.jump(p, step);
    }
    debug_assert!(abacus.to_partition().is_empty());
    Ok(if inter.is_multiple_of(2) { 1 } else { -1 })
}

/// Finite window onto a beta-set: positions below `floor` are all occupied,
/// positions at or above it are occupied iff listed.
#[derive(Clone, Debug)]
pub(crate) struct Abacus {
    occupied: BTreeSet<i64>,
    floor: i64,
}

impl Abacus {
    /// Window deep enough for jumps of length up to `reach`.
    pub(crate) fn new(p: &Partition, reach: usize) -> Self {
        let depth = (p.len() + reach) as i64;
        let occupied = (1..=depth)
            .map(|i| p.part(i as usize - 1) as i64 - i)
            .collect();
        Abacus {
            occupied,
            floor: -depth,
        }
    }

    pub(crate) fn is_occupied(&self, q: i64) -> bool {
        q < self.floor || self.occupied.contains(&q)
    }

    /// Positions (ascending) of particles that can jump down by `k`.
    pub(crate) fn jump_sources(&self, k: i64) -> Vec<i64> {
        self.occupied
            .iter()
            .copied()
            .filter(|&p| !self.is_occupied(p - k))
            .collect()
    }

    /// Occupied positions strictly between `low` and `high`.
    pub(crate) fn between(&self, low: i64, high: i64) -> impl Iterator<Item = i64> + '_ {
        self.occupied.range(low + 1..high).copied()
    }

    pub(crate) fn jump(&mut self, from: i64, k: i64) {
        debug_assert!(self.occupied.contains(&from) && !self.is_occupied(from - k));
        self.occupied.remove(&from);
        self.occupied.insert(from - k);
    }

    /// Decodes the window, subtracting its charge first.
    pub(crate) fn to_partition(&self) -> Partition {
        let charge = self.occupied.len() as i64 + self.floor;
        let parts = self
            .occupied
            .iter()
            .rev()
            .enumerate()
            .map(|(i, &s)| (s + i as i64 + 1 - charge) as usize)
            .filter(|&p| p > 0)
            .collect();
        Partition::new(parts).expect("abacus window decodes to a partition")
    }
}
