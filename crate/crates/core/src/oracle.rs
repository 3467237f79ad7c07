//! Exhaustive enumeration of permutation factorizations, used as ground truth
//! for the character-based counts.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::census::{genus_of, Census, CensusKey, CountQuery, MapKind, RawCensus, RawKey};
use crate::error::{Error, Result};
use crate::partition::{binomial, factorial, Partition};

/// Largest number of tuples an enumeration may visit.
pub const BUDGET: u128 = 100_000_000;

/// A permutation of `0..n`; products compose left to right, so `a.then(b)`
/// applies `a` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidQuery(format!(
                    "not a permutation: {images:?}"
                )));
            }
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation of `0..n` from disjoint cycles given 0-based.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n || std::mem::replace(&mut used[a], true) {
                    return Err(Error::InvalidQuery(format!("bad cycle {cycle:?}")));
                }
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    /// `(1..m)(m+1..2m)⋯` on `0..mn`.
    pub fn hyperedges(n: usize, m: usize) -> Self {
        Perm {
            images: (0..m * n)
                .map(|i| if i % m == m - 1 { i + 1 - m } else { i + 1 })
                .collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycles().iter().map(Vec::len).collect())
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles().len()
    }
}

impl fmt::Display for Perm {
    /// Cycle notation, 1-based, fixed points included.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            let items: Vec<String> = cycle.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", items.join(","))?;
        }
        Ok(())
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![Perm {
        images: cur.clone(),
    }];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Perm {
            images: cur.clone(),
        });
    }
}

struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.components -= 1;
        }
    }
}

/// Whether the group generated by `perms` acts with a single orbit.
pub fn is_transitive(perms: &[Perm]) -> bool {
    let Some(n) = perms.first().map(Perm::degree) else {
        return false;
    };
    let mut uf = UnionFind::new(n);
    for p in perms {
        for i in 0..n {
            uf.union(i, p.apply(i));
        }
    }
    uf.components == 1
}

/// Intransitive and transitive tallies from one enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRun {
    pub raw: RawCensus,
    pub transitive: Census,
}

type Tally = BTreeMap<RawKey, (u64, u64)>;

fn merge(mut a: Tally, b: Tally) -> Tally {
    for (k, (all, tr)) in b {
        let e = a.entry(k).or_insert((0, 0));
        e.0 += all;
        e.1 += tr;
    }
    a
}

fn assemble(kind: MapKind, m: usize, n: usize, tally: Tally) -> Result<OracleRun> {
    let mut raw = BTreeMap::new();
    let mut transitive = BTreeMap::new();
    for (key, (all, tr)) in tally {
        if tr > 0 {
            let vertices = key.colors.iter().sum();
            let genus = genus_of(vertices, key.mu.len(), n, m)?;
            transitive.insert(
                CensusKey {
                    genus,
                    face_profile: key.mu.clone(),
                    colors: key.colors.clone(),
                },
                BigUint::from(tr),
            );
        }
        raw.insert(key, BigUint::from(all));
    }
    Ok(OracleRun {
        raw: RawCensus {
            kind,
            m,
            n,
            entries: raw,
        },
        transitive: Census {
            kind,
            m,
            n_max: n,
            entries: transitive,
        },
    })
}

fn check_budget(needed: u128) -> Result<()> {
    if needed > BUDGET {
        return Err(Error::BudgetExceeded {
            needed,
            budget: BUDGET,
        });
    }
    Ok(())
}

fn to_u128(v: &BigUint) -> u128 {
    u128::try_from(v).unwrap_or(u128::MAX)
}

/// Every `(σ_1, …, σ_m)` in `S_n^m`, with `φ = (σ_1⋯σ_m)^{-1}`.
pub fn brute_constellation_run(n: usize, m: usize) -> Result<OracleRun> {
    if m < 2 {
        return Err(Error::InvalidModulus { m, min: 2 });
    }
    if n == 0 {
        return Err(Error::InvalidQuery("n must be positive".into()));
    }
    check_budget(to_u128(&factorial(n).pow(m as u32)))?;
    let perms = all_perms(n);
    let tally = perms
        .par_iter()
        .map(|first| {
            let mut tally = Tally::new();
            let mut idx = vec![0usize; m - 1];
            loop {
                let mut tuple = vec![first.clone()];
                tuple.extend(idx.iter().map(|&i| perms[i].clone()));
                let product = tuple
                    .iter()
                    .skip(1)
                    .fold(first.clone(), |acc, s| acc.then(s));
                let key = RawKey {
                    colors: tuple.iter().map(Perm::num_cycles).collect(),
                    mu: product.inverse().cycle_type(),
                };
                let e = tally.entry(key).or_insert((0, 0));
                e.0 += 1;
                if is_transitive(&tuple) {
                    e.1 += 1;
                }
                if !odometer(&mut idx, perms.len()) {
                    break;
                }
            }
            tally
        })
        .reduce(Tally::new, merge);
    assemble(MapKind::Constellation, m, n, tally)
}

fn odometer(idx: &mut [usize], base: usize) -> bool {
    for slot in idx.iter_mut() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Number of permutations of `0..mn` whose cycle lengths are all multiples of m.
pub fn divisible_perm_count(n: usize, m: usize) -> BigUint {
    // choose the cycle through the smallest free point: (N-1)!/(N-L)! ways
    let mut ways = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::one();
    for k in 1..=n {
        let big_n = m * k;
        for l in 1..=k {
            let len = m * l;
            let arrangements = factorial(big_n - 1) / factorial(big_n - len);
            ways[k] = &ways[k] + arrangements * &ways[k - l];
        }
    }
    ways[n].clone()
}

/// Every φ in `S_{mn}` with all cycle lengths divisible by m, paired with the
/// fixed τ of type `[m^n]` and `σ = (τφ)^{-1}`.
pub fn brute_hypermap_run(n: usize, m: usize) -> Result<OracleRun> {
    if m < 2 {
        return Err(Error::InvalidModulus { m, min: 2 });
    }
    if n == 0 {
        return Err(Error::InvalidQuery("n must be positive".into()));
    }
    check_budget(to_u128(&divisible_perm_count(n, m)))?;
    let size = m * n;
    let tau = Perm::hyperedges(n, m);
    // the cycle of φ through point 0 is the outer choice
    let mut firsts = Vec::new();
    for l in 1..=n {
        let mut cycle = vec![0usize];
        let mut used = vec![false; size];
        used[0] = true;
        arrangements(&mut cycle, &mut used, m * l, &mut |c| {
            firsts.push(c.to_vec())
        });
    }
    let tally = firsts
        .par_iter()
        .map(|first| {
            let mut tally = Tally::new();
            let mut images = vec![usize::MAX; size];
            let mut used = vec![false; size];
            close_cycle(first, &mut images, &mut used);
            complete(&mut images, &mut used, m, &mut |phi| {
                let phi = Perm {
                    images: phi.to_vec(),
                };
                let sigma = tau.then(&phi).inverse();
                let mu = Partition::from_unsorted(
                    phi.cycle_type().parts().iter().map(|p| p / m).collect(),
                );
                let key = RawKey {
                    colors: vec![sigma.num_cycles()],
                    mu,
                };
                let e = tally.entry(key).or_insert((0, 0));
                e.0 += 1;
                if is_transitive(&[tau.clone(), phi]) {
                    e.1 += 1;
                }
            });
            tally
        })
        .reduce(Tally::new, merge);
    assemble(MapKind::Hypermap, m, n, tally)
}

/// Extends `cycle` to every ordered cycle of length `len` over unused points.
fn arrangements(
    cycle: &mut Vec<usize>,
    used: &mut [bool],
    len: usize,
    emit: &mut impl FnMut(&[usize]),
) {
    if cycle.len() == len {
        emit(cycle);
        return;
    }
    for p in 0..used.len() {
        if !used[p] {
            used[p] = true;
            cycle.push(p);
            arrangements(cycle, used, len, emit);
            cycle.pop();
            used[p] = false;
        }
    }
}

fn close_cycle(cycle: &[usize], images: &mut [usize], used: &mut [bool]) {
    for (k, &a) in cycle.iter().enumerate() {
        images[a] = cycle[(k + 1) % cycle.len()];
        used[a] = true;
    }
}

fn complete(
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
    m: usize,
    emit: &mut impl FnMut(&[usize]),
) {
    let Some(start) = used.iter().position(|u| !u) else {
        emit(images);
        return;
    };
    let free = used.iter().filter(|u| !**u).count();
    for len in (m..=free).step_by(m) {
        let mut cycle = vec![start];
        let mut mark = used.clone();
        mark[start] = true;
        let mut found = Vec::new();
        arrangements(&mut cycle, &mut mark, len, &mut |c| found.push(c.to_vec()));
        for c in found {
            let saved = (images.clone(), used.clone());
            close_cycle(&c, images, used);
            complete(images, used, m, emit);
            (*images, *used) = saved;
        }
    }
}

/// Transitive tally of `(σ_1, …, σ_m)` keyed by genus, φ-type and colors.
pub fn brute_constellations(n: usize, m: usize) -> Result<Census> {
    Ok(brute_constellation_run(n, m)?.transitive)
}

/// Transitive tally of `(σ, τ, φ)` keyed by genus, φ-type/m and `l(σ)`.
pub fn brute_hypermaps(n: usize, m: usize) -> Result<Census> {
    Ok(brute_hypermap_run(n, m)?.transitive)
}

/// Rooted count for a query against a brute-force census of size `q.n`:
/// `Σ count · ∏ binom(l_i, k_i) / (n-1)!`, with the extra `m^{n-1}` for
/// hypermaps.
pub fn marked_counts(census: &Census, q: &CountQuery) -> Result<BigUint> {
    q.validate()?;
    let mut total = BigUint::zero();
    for (key, count) in &census.entries {
        if key.genus != q.genus || key.face_profile.size() != q.n {
            continue;
        }
        if let Some(d) = &q.degrees {
            if !key.face_profile.parts().iter().all(|p| d.contains(p)) {
                continue;
            }
        }
        let mut w = count.clone();
        for (i, &k) in q.marks.iter().enumerate() {
            w *= binomial(key.colors.get(i).copied().unwrap_or(0), k);
        }
        total += w;
    }
    let mut divisor = factorial(q.n - 1);
    if census.kind == MapKind::Hypermap {
        divisor *= BigUint::from(census.m).pow(q.n as u32 - 1);
    }
    if !(&total % &divisor).is_zero() {
        return Err(Error::NonIntegral {
            context: "marked_counts".into(),
            value: format!("{total}/{divisor}"),
        });
    }
    Ok(total / divisor)
}

/// Number of `(τ_1, …, τ_k)` with `τ_i` of type `betas[i]` and
/// `τ_1⋯τ_k σ = id` for a fixed σ of type `alpha`, by enumeration.
pub fn brute_frobenius(alpha: &Partition, betas: &[Partition]) -> Result<BigUint> {
    let n = alpha.size();
    if let Some(b) = betas.iter().find(|b| b.size() != n) {
        return Err(Error::SizeMismatch {
            left: n,
            right: b.size(),
        });
    }
    let Some((last, init)) = betas.split_last() else {
        return Ok(BigUint::from(u8::from(*alpha == Partition::ones(n))));
    };
    check_budget(to_u128(&factorial(n).pow(init.len() as u32)))?;
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for &p in alpha.parts() {
        cycles.push((next..next + p).collect());
        next += p;
    }
    let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
    let sigma_inv = Perm::from_cycles(n, &refs)?.inverse();
    let classes: Vec<Vec<Perm>> = init
        .iter()
        .map(|b| {
            all_perms(n)
                .into_iter()
                .filter(|p| p.cycle_type() == *b)
                .collect()
        })
        .collect();
    let mut count = 0u64;
    let mut idx = vec![0usize; init.len()];
    if classes.iter().any(Vec::is_empty) {
        return Ok(BigUint::zero());
    }
    loop {
        let prefix = idx
            .iter()
            .zip(&classes)
            .fold(Perm::identity(n), |acc, (&i, c)| acc.then(&c[i]));
        // τ_k = (τ_1⋯τ_{k-1})^{-1} σ^{-1}
        if prefix.inverse().then(&sigma_inv).cycle_type() == *last {
            count += 1;
        }
        let mut carried = true;
        for (slot, c) in idx.iter_mut().zip(&classes) {
            *slot += 1;
            if *slot < c.len() {
                carried = false;
                break;
            }
            *slot = 0;
        }
        if carried {
            break;
        }
    }
    Ok(BigUint::from(count))
}
