//! Character-based counts of rooted hypermaps and constellations by genus,
//! hyperface profile and vertex counts.
//!
//! Raw censuses count all (possibly intransitive) factorizations for a single
//! size. Taking the logarithm of their exponential generating series yields
//! transitive factorizations, from which rooted map counts follow by dividing
//! out relabellings.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use parking_lot::Mutex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beta::is_splittable;
use crate::bigser;
use crate::character::{chi, exact_natural};
use crate::error::{Error, Result};
use crate::partition::{binomial, factorial, factorial_int, partitions, Partition};
use crate::series::{Monomial, Series};

/// Largest `m·n` a census will be built for.
pub const MAX_CENSUS_SIZE: usize = 36;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Hypermap,
    Constellation,
}

/// Cycle counts of the vertex permutations (one entry per color for
/// constellations, a single entry for hypermaps) and the face profile μ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RawKey {
    pub colors: Vec<usize>,
    pub mu: Partition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCensus {
    pub kind: MapKind,
    pub m: usize,
    pub n: usize,
    pub entries: BTreeMap<RawKey, BigUint>,
}

impl RawCensus {
    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CensusKey {
    pub genus: usize,
    pub face_profile: Partition,
    pub colors: Vec<usize>,
}

impl CensusKey {
    pub fn n(&self) -> usize {
        self.face_profile.size()
    }

    pub fn vertices(&self) -> usize {
        self.colors.iter().sum()
    }
}

/// Transitive factorization counts for every size `1..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub kind: MapKind,
    pub m: usize,
    pub n_max: usize,
    pub entries: BTreeMap<CensusKey, BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub genus: usize,
    pub mu: Partition,
    pub colors: Vec<usize>,
    #[serde(serialize_with = "bigser::biguint")]
    pub count: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountQuery {
    pub kind: MapKind,
    pub m: usize,
    pub n: usize,
    pub genus: usize,
    /// Allowed values of `d` for hyperface degrees `m·d`; `None` is unrestricted.
    pub degrees: Option<BTreeSet<usize>>,
    /// Marked vertices per color, starting at color 1.
    pub marks: Vec<usize>,
}

impl CountQuery {
    pub fn hypermaps(m: usize, n: usize, genus: usize) -> Self {
        CountQuery {
            kind: MapKind::Hypermap,
            m,
            n,
            genus,
            degrees: None,
            marks: Vec::new(),
        }
    }

    pub fn constellations(m: usize, n: usize, genus: usize) -> Self {
        CountQuery {
            kind: MapKind::Constellation,
            ..CountQuery::hypermaps(m, n, genus)
        }
    }

    pub fn with_degrees(mut self, d: impl IntoIterator<Item = usize>) -> Self {
        self.degrees = Some(d.into_iter().collect());
        self
    }

    pub fn with_marks(mut self, marks: Vec<usize>) -> Self {
        self.marks = marks;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::InvalidModulus { m: self.m, min: 2 });
        }
        if self.n == 0 {
            return Err(Error::InvalidQuery("n must be positive".into()));
        }
        if self.m * self.n > MAX_CENSUS_SIZE {
            return Err(Error::InvalidQuery(format!(
                "m*n = {} exceeds the census limit {MAX_CENSUS_SIZE}",
                self.m * self.n
            )));
        }
        if let Some(d) = &self.degrees {
            if d.contains(&0) {
                return Err(Error::InvalidQuery("degrees must be positive".into()));
            }
        }
        match self.kind {
            MapKind::Hypermap if !self.marks.is_empty() => Err(Error::InvalidQuery(
                "marks apply to constellations only".into(),
            )),
            MapKind::Constellation if self.marks.len() > self.m => Err(Error::InvalidQuery(
                format!("at most {} mark entries for m = {}", self.m, self.m),
            )),
            _ => Ok(()),
        }
    }

    fn admits(&self, mu: &Partition) -> bool {
        self.degrees
            .as_ref()
            .is_none_or(|d| mu.parts().iter().all(|p| d.contains(p)))
    }
}

/// `g = (2 - V - F - n + m·n) / 2`.
pub fn genus_of(vertices: usize, faces: usize, n: usize, m: usize) -> Result<usize> {
    let twice = 2 + (m * n) as i64 - (vertices + faces + n) as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::EulerViolation {
            vertices,
            faces,
            n,
            m,
        });
    }
    Ok((twice / 2) as usize)
}

fn check_size(n: usize, m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidModulus { m, min: 2 });
    }
    if m * n > MAX_CENSUS_SIZE {
        return Err(Error::InvalidQuery(format!(
            "m*n = {} exceeds the census limit {MAX_CENSUS_SIZE}",
            m * n
        )));
    }
    Ok(())
}

type Accumulator = BTreeMap<RawKey, BigInt>;

fn merge(mut a: Accumulator, b: Accumulator) -> Accumulator {
    for (k, v) in b {
        *a.entry(k).or_insert_with(BigInt::zero) += v;
    }
    a
}

fn finish(
    acc: Accumulator,
    divisor: impl Fn(&Partition) -> BigInt,
    context: &str,
) -> Result<BTreeMap<RawKey, BigUint>> {
    let mut out = BTreeMap::new();
    for (key, v) in acc {
        let d = divisor(&key.mu);
        let count = exact_natural(&BigRational::new(v, d), context)?;
        if !count.is_zero() {
            out.insert(key, count);
        }
    }
    Ok(out)
}

/// Counts of `σ_1⋯σ_m φ = id` in `S_n` by `(l(σ_1),…,l(σ_m))` and the type of φ.
pub fn rc_census(n: usize, m: usize) -> Result<RawCensus> {
    check_size(n, m)?;
    let mus = partitions(n);
    let acc = partitions(n)
        .par_iter()
        .map(|theta| -> Result<Accumulator> {
            let f = BigInt::from(theta.dimension());
            let h = theta.content_poly();
            let support: Vec<(usize, &BigInt)> = h
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let mut acc = Accumulator::new();
            for mu in &mus {
                let weight = &f * chi(theta, mu)?;
                if weight.is_zero() {
                    continue;
                }
                let mut idx = vec![0usize; m];
                loop {
                    let mut term = weight.clone();
                    for &i in &idx {
                        term *= support[i].1;
                    }
                    let key = RawKey {
                        colors: idx.iter().map(|&i| support[i].0).collect(),
                        mu: mu.clone(),
                    };
                    *acc.entry(key).or_insert_with(BigInt::zero) += term;
                    if !advance(&mut idx, support.len()) {
                        break;
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Accumulator::new(), merge);
    let entries = finish(acc, |mu| BigInt::from(mu.z()), "rc_census")?;
    Ok(RawCensus {
        kind: MapKind::Constellation,
        m,
        n,
        entries,
    })
}

/// Odometer over `idx ∈ [0, base)^len`; false once it wraps around.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for slot in idx.iter_mut() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Counts of `σ τ φ = id` in `S_{mn}` with τ fixed of type `[m^n]` and φ of
/// type `mμ`, by `l(σ)` and μ.
pub fn rh_census(n: usize, m: usize) -> Result<RawCensus> {
    check_size(n, m)?;
    let mus = partitions(n);
    let rect = Partition::rectangle(m, n);
    let acc = partitions(m * n)
        .par_iter()
        .filter(|theta| is_splittable(theta, m))
        .map(|theta| -> Result<Accumulator> {
            let a = chi(theta, &rect)?;
            let h = theta.content_poly();
            let mut acc = Accumulator::new();
            if a.is_zero() {
                return Ok(acc);
            }
            for mu in &mus {
                let weight = &a * chi(theta, &mu.scale(m))?;
                if weight.is_zero() {
                    continue;
                }
                for (v, c) in h.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let key = RawKey {
                        colors: vec![v],
                        mu: mu.clone(),
                    };
                    *acc.entry(key).or_insert_with(BigInt::zero) += &weight * c;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Accumulator::new(), merge);
    let entries = finish(
        acc,
        |mu| BigInt::from(m).pow(mu.len() as u32) * BigInt::from(mu.z()),
        "rh_census",
    )?;
    Ok(RawCensus {
        kind: MapKind::Hypermap,
        m,
        n,
        entries,
    })
}

fn raw_monomial(n: usize, key: &RawKey) -> Monomial {
    let mut mono = Monomial::one().z(n as u32);
    for (i, &l) in key.colors.iter().enumerate() {
        mono = mono.x(i + 1, l as u32);
    }
    for (part, mult) in key.mu.multiplicities() {
        mono = mono.y(part, mult as u32);
    }
    mono
}

/// `Σ_n z^n/n! Σ count · x^colors · y_μ` over the given raw censuses, without
/// the constant term.
pub fn raw_series(raws: &[RawCensus], max_z: u32) -> Series {
    let mut s = Series::zero(max_z, 0);
    for raw in raws {
        let nf = factorial_int(raw.n);
        for (key, count) in &raw.entries {
            let c = BigRational::new(BigInt::from(count.clone()), nf.clone());
            s.add_term(raw_monomial(raw.n, key), c);
        }
    }
    s
}

/// Transitive counts from raw censuses for every size `1..=n_max`.
pub fn connected_census(raws: &[RawCensus]) -> Result<Census> {
    let first = raws
        .first()
        .ok_or_else(|| Error::InvalidQuery("no raw census supplied".into()))?;
    let (kind, m) = (first.kind, first.m);
    for (i, raw) in raws.iter().enumerate() {
        if raw.n != i + 1 || raw.kind != kind || raw.m != m {
            return Err(Error::InvalidQuery(
                "raw censuses must cover sizes 1..=n_max for one kind and m".into(),
            ));
        }
    }
    let n_max = raws.len();
    let log = raw_series(raws, n_max as u32).log1p()?;
    let mut entries = BTreeMap::new();
    for (mono, c) in log.terms() {
        let n = mono.z_deg() as usize;
        let colors: Vec<usize> = match kind {
            MapKind::Constellation => (1..=m).map(|i| mono.x_deg(i) as usize).collect(),
            MapKind::Hypermap => vec![mono.x_deg(1) as usize],
        };
        let mut mu_parts = Vec::new();
        for (i, &e) in mono.y_degrees().iter().enumerate() {
            mu_parts.extend(std::iter::repeat_n(i + 1, e as usize));
        }
        let mu = Partition::from_unsorted(mu_parts);
        let count = exact_natural(
            &(c * BigRational::from_integer(factorial_int(n))),
            "connected_census",
        )?;
        let genus = genus_of(colors.iter().sum(), mu.len(), n, m)?;
        entries.insert(
            CensusKey {
                genus,
                face_profile: mu,
                colors,
            },
            count,
        );
    }
    Ok(Census {
        kind,
        m,
        n_max,
        entries,
    })
}

impl Census {
    /// Builds the census for sizes `1..=n_max` from scratch.
    pub fn build(kind: MapKind, m: usize, n_max: usize) -> Result<Census> {
        check_size(n_max, m)?;
        if n_max == 0 {
            return Ok(Census {
                kind,
                m,
                n_max,
                entries: BTreeMap::new(),
            });
        }
        let raws = (1..=n_max)
            .map(|n| match kind {
                MapKind::Constellation => rc_census(n, m),
                MapKind::Hypermap => rh_census(n, m),
            })
            .collect::<Result<Vec<_>>>()?;
        connected_census(&raws)
    }

    /// Number of labelled transitive factorizations per rooted map of size n.
    pub fn relabellings(&self, n: usize) -> BigUint {
        let base = factorial(n - 1);
        match self.kind {
            MapKind::Constellation => base,
            MapKind::Hypermap => base * BigUint::from(self.m).pow(n as u32 - 1),
        }
    }

    pub fn rooted_count(&self, key: &CensusKey) -> Result<BigUint> {
        let t = self.entries.get(key).cloned().unwrap_or_default();
        let r = BigRational::new(t.into(), self.relabellings(key.n()).into());
        exact_natural(&r, "rooted_count")
    }

    /// Rooted counts keyed like the census, sorted.
    pub fn records(&self) -> Result<Vec<CensusRecord>> {
        self.entries
            .keys()
            .map(|key| {
                Ok(CensusRecord {
                    genus: key.genus,
                    mu: key.face_profile.clone(),
                    colors: key.colors.clone(),
                    count: self.rooted_count(key)?,
                })
            })
            .collect()
    }

    pub fn count(&self, q: &CountQuery) -> Result<BigUint> {
        q.validate()?;
        if q.kind != self.kind || q.m != self.m || q.n > self.n_max {
            return Err(Error::InvalidQuery(format!(
                "census ({:?}, m={}, n<={}) cannot answer {:?} m={} n={}",
                self.kind, self.m, self.n_max, q.kind, q.m, q.n
            )));
        }
        let mut total = BigUint::zero();
        for key in self.entries.keys() {
            if key.genus != q.genus || key.n() != q.n || !q.admits(&key.face_profile) {
                continue;
            }
            let mut weight = self.rooted_count(key)?;
            for (l, &k) in key.colors.iter().zip(&q.marks) {
                weight *= binomial(*l, k);
            }
            total += weight;
        }
        Ok(total)
    }

    /// The rooted generating series with `u^{2g}` marking genus:
    /// `Σ count · u^{2g} x^colors y_μ z^n`.
    pub fn generating_series(&self, max_u: u32) -> Result<Series> {
        let mut s = Series::zero(self.n_max as u32, max_u);
        for key in self.entries.keys() {
            let raw = RawKey {
                colors: key.colors.clone(),
                mu: key.face_profile.clone(),
            };
            let mono = raw_monomial(key.n(), &raw).u(2 * key.genus as u32);
            let count = self.rooted_count(key)?;
            s.add_term(mono, BigRational::from_integer(count.into()));
        }
        Ok(s)
    }
}

type CensusCache = Mutex<HashMap<(MapKind, usize), Arc<Census>>>;

fn cache() -> &'static CensusCache {
    static CACHE: OnceLock<CensusCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// A shared census covering at least sizes `1..=n_max`.
pub fn census(kind: MapKind, m: usize, n_max: usize) -> Result<Arc<Census>> {
    let mut guard = cache().lock();
    if let Some(c) = guard.get(&(kind, m)) {
        if c.n_max >= n_max {
            return Ok(Arc::clone(c));
        }
    }
    let built = Arc::new(Census::build(kind, m, n_max)?);
    guard.insert((kind, m), Arc::clone(&built));
    Ok(built)
}

fn count_kind(q: &CountQuery, kind: MapKind) -> Result<BigUint> {
    if q.kind != kind {
        return Err(Error::InvalidQuery(format!("expected a {kind:?} query")));
    }
    q.validate()?;
    census(kind, q.m, q.n)?.count(q)
}

/// Rooted m-constellations with n hyperedges, genus g, hyperface degrees in
/// `m·D`, and `marks[i]` marked vertices of color `i+1`.
pub fn count_constellations(q: &CountQuery) -> Result<BigUint> {
    count_kind(q, MapKind::Constellation)
}

/// Rooted m-hypermaps with n hyperedges, genus g and hyperface degrees in `m·D`.
pub fn count_hypermaps(q: &CountQuery) -> Result<BigUint> {
    count_kind(q, MapKind::Hypermap)
}
