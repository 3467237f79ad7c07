//! Coefficients of the hypermap/constellation relation and its verification.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bigser;
use crate::census::{count_constellations, count_hypermaps, CountQuery};
use crate::error::{Error, Result};

/// A mark vector `(k_1, …, k_{m-1})` for a given m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoeffIndex {
    pub m: usize,
    pub ks: Vec<usize>,
}

impl CoeffIndex {
    pub fn new(m: usize, ks: Vec<usize>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus { m, min: 2 });
        }
        if ks.len() != m - 1 {
            return Err(Error::InvalidQuery(format!(
                "expected {} indices for m = {m}, got {}",
                m - 1,
                ks.len()
            )));
        }
        Ok(CoeffIndex { m, ks })
    }

    pub fn order(&self) -> usize {
        self.ks.iter().sum()
    }

    /// `k_r` for `1 ≤ r ≤ m-1`.
    fn k(&self, r: usize) -> u32 {
        self.ks[r - 1] as u32
    }
}

/// All vectors of `len` nonnegative integers summing to `total`, in
/// lexicographic order.
pub fn compositions(len: usize, total: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(len - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out.reverse();
    out
}

/// `e^{(m),j}_k = ∏_{i ≠ j} (i - j)^{k_{(i-j) mod m}}`.
pub fn e_coeff(idx: &CoeffIndex, j: usize) -> BigInt {
    let m = idx.m;
    assert!((1..=m).contains(&j), "j must lie in 1..=m");
    let mut out = BigInt::from(1);
    for i in (1..=m).filter(|&i| i != j) {
        let r = (i as i64 - j as i64).rem_euclid(m as i64) as usize;
        out *= BigInt::from(i as i64 - j as i64).pow(idx.k(r));
    }
    out
}

/// `2 Σ_{j≤p} e_j` for `m = 2p`, `e_{p+1} + 2 Σ_{j≤p} e_j` for `m = 2p+1`.
///
/// Panics if the result is not a positive multiple of m.
pub fn d_coeff(idx: &CoeffIndex) -> BigInt {
    let m = idx.m;
    let p = m / 2;
    let mut d: BigInt = (1..=p).map(|j| e_coeff(idx, j)).sum::<BigInt>() * 2;
    if m % 2 == 1 {
        d += e_coeff(idx, p + 1);
    }
    assert!(d.is_positive(), "d_coeff{:?} = {d} is not positive", idx.ks);
    assert!(
        d.is_multiple_of(&BigInt::from(m)),
        "d_coeff{:?} = {d} is not divisible by {m}",
        idx.ks
    );
    d
}

/// `d / m`.
pub fn c_coeff(idx: &CoeffIndex) -> BigUint {
    let d = d_coeff(idx) / BigInt::from(idx.m);
    d.to_biguint().expect("positive by d_coeff")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffRow {
    pub ks: Vec<usize>,
    #[serde(serialize_with = "ser_bigint_vec")]
    pub e: Vec<BigInt>,
    #[serde(serialize_with = "bigser::bigint")]
    pub d: BigInt,
    #[serde(serialize_with = "bigser::biguint")]
    pub c: BigUint,
}

fn ser_bigint_vec<S: serde::Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Wrap(x))?;
    }
    seq.end()
}

struct Wrap<'a>(&'a BigInt);

impl Serialize for Wrap<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        bigser::bigint(self.0, s)
    }
}

/// e for every j, d and c for every index of order at most `order`.
pub fn coeff_table(m: usize, order: usize) -> Result<Vec<CoeffRow>> {
    let mut rows = Vec::new();
    for total in 0..=order {
        for ks in compositions(m.saturating_sub(1), total) {
            let idx = CoeffIndex::new(m, ks)?;
            rows.push(CoeffRow {
                e: (1..=m).map(|j| e_coeff(&idx, j)).collect(),
                d: d_coeff(&idx),
                c: c_coeff(&idx),
                ks: idx.ks,
            });
        }
    }
    Ok(rows)
}

/// `|e_{j+1}| ≤ |e_j|` for `j ≤ m/2`, and `|e_{j+1}| ≤ j/(m-j)·|e_j|` when
/// `k_{m-j} ≥ 1`.
pub fn telescoping_holds(idx: &CoeffIndex) -> bool {
    let m = idx.m;
    (1..=m / 2).filter(|&j| j < m).all(|j| {
        let a = e_coeff(idx, j + 1).abs();
        let b = e_coeff(idx, j).abs();
        let weak = a <= b;
        let strong = idx.k(m - j) == 0 || &a * BigInt::from(m - j) <= &b * BigInt::from(j);
        weak && strong
    })
}

/// The special-case coefficients as displayed for m = 3 and m = 4, indexed in
/// the display's own order.
pub fn displayed_coeff(m: usize, ks: &[usize]) -> Result<BigRational> {
    let two = BigInt::from(2);
    let sign = |l: usize| BigInt::from(if l.is_multiple_of(2) { 1 } else { -1 });
    match (m, ks) {
        (3, &[l, _]) => Ok(BigRational::new(
            &two * two.pow(l as u32) + sign(l),
            BigInt::from(3),
        )),
        (4, &[l1, l2, _]) => Ok(BigRational::new(
            &two * (BigInt::from(3).pow(l1 as u32) * two.pow(l2 as u32)
                + two.pow(l2 as u32) * sign(l1)),
            BigInt::from(4),
        )),
        _ => Err(Error::InvalidQuery(format!(
            "no displayed closed form for m = {m} with {} indices",
            ks.len()
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitMismatch {
    pub orbit: Vec<usize>,
    #[serde(serialize_with = "bigser::rational")]
    pub displayed: BigRational,
    #[serde(serialize_with = "bigser::biguint")]
    pub computed: BigUint,
}

/// Compares the displayed closed forms with `c_coeff` summed over each class
/// of index vectors that permute into one another (these multiply the same
/// constellation count), for every even order up to `max_order`.
pub fn closed_form_mismatches(m: usize, max_order: usize) -> Result<Vec<OrbitMismatch>> {
    let mut sums: BTreeMap<Vec<usize>, (BigRational, BigUint)> = BTreeMap::new();
    for total in (0..=max_order).step_by(2) {
        for ks in compositions(m - 1, total) {
            let mut orbit = ks.clone();
            orbit.sort_unstable();
            let entry = sums
                .entry(orbit)
                .or_insert_with(|| (BigRational::zero(), BigUint::zero()));
            entry.0 += displayed_coeff(m, &ks)?;
            entry.1 += c_coeff(&CoeffIndex::new(m, ks)?);
        }
    }
    Ok(sums
        .into_iter()
        .filter(|(_, (a, b))| *a != BigRational::from_integer(BigInt::from(b.clone())))
        .map(|(orbit, (displayed, computed))| OrbitMismatch {
            orbit,
            displayed,
            computed,
        })
        .collect())
}

fn query_with(mut q: CountQuery, degrees: &Option<BTreeSet<usize>>) -> CountQuery {
    q.degrees = degrees.clone();
    q
}

/// `Σ_{i=0}^{g} m^{2g-2i} Σ_{|k|=2i} c_k · C^{(g-i,k)}_{n,m,D}`.
pub fn relation_rhs(
    n: usize,
    m: usize,
    g: usize,
    degrees: &Option<BTreeSet<usize>>,
) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for i in 0..=g {
        let weight = BigUint::from(m).pow(2 * (g - i) as u32);
        for ks in compositions(m - 1, 2 * i) {
            let c = c_coeff(&CoeffIndex::new(m, ks.clone())?);
            let q = query_with(
                CountQuery::constellations(m, n, g - i).with_marks(ks),
                degrees,
            );
            total += &weight * c * count_constellations(&q)?;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationRow {
    pub n: usize,
    pub genus: usize,
    #[serde(serialize_with = "bigser::biguint")]
    pub hypermaps: BigUint,
    #[serde(serialize_with = "bigser::biguint")]
    pub rhs: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub m: usize,
    pub n_max: usize,
    pub g_max: usize,
    pub degrees: Option<BTreeSet<usize>>,
    pub cases: usize,
    pub rows: Vec<RelationRow>,
    pub failures: Vec<RelationRow>,
}

/// Checks `H^{(g)}_{n,m,D} = relation_rhs` for all `1 ≤ n ≤ n_max`, `g ≤ g_max`.
pub fn verify_relation(
    n_max: usize,
    m: usize,
    g_max: usize,
    degrees: Option<BTreeSet<usize>>,
) -> Result<RelationReport> {
    if m < 2 {
        return Err(Error::InvalidModulus { m, min: 2 });
    }
    let grid: Vec<(usize, usize)> = (1..=n_max)
        .flat_map(|n| (0..=g_max).map(move |g| (n, g)))
        .collect();
    // build the shared censuses once before fanning out
    if n_max > 0 {
        count_hypermaps(&query_with(CountQuery::hypermaps(m, n_max, 0), &degrees))?;
        count_constellations(&query_with(
            CountQuery::constellations(m, n_max, 0),
            &degrees,
        ))?;
    }
    let rows = grid
        .par_iter()
        .map(|&(n, g)| -> Result<RelationRow> {
            let hypermaps = count_hypermaps(&query_with(CountQuery::hypermaps(m, n, g), &degrees))?;
            let rhs = relation_rhs(n, m, g, &degrees)?;
            Ok(RelationRow {
                n,
                genus: g,
                hypermaps,
                rhs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let failures = rows
        .iter()
        .filter(|r| r.hypermaps != r.rhs)
        .cloned()
        .collect();
    Ok(RelationReport {
        m,
        n_max,
        g_max,
        degrees,
        cases: rows.len(),
        rows,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsymptoticRow {
    pub n: usize,
    #[serde(serialize_with = "bigser::rational")]
    pub ratio: BigRational,
}

/// `H^{(g)}_n / (m^{2g} C^{(g)}_n)` for each requested n; rows with
/// `C^{(g)}_n = 0` are omitted.
pub fn asymptotic_table(
    m: usize,
    g: usize,
    degrees: &Option<BTreeSet<usize>>,
    ns: &[usize],
) -> Result<Vec<AsymptoticRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        let c = count_constellations(&query_with(CountQuery::constellations(m, n, g), degrees))?;
        if c.is_zero() {
            continue;
        }
        let h = count_hypermaps(&query_with(CountQuery::hypermaps(m, n, g), degrees))?;
        let denom = BigInt::from(BigUint::from(m).pow(2 * g as u32) * c);
        rows.push(AsymptoticRow {
            n,
            ratio: BigRational::new(BigInt::from(h), denom),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn idx(m: usize, ks: &[usize]) -> CoeffIndex {
        CoeffIndex::new(m, ks.to_vec()).unwrap()
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn index_validation() {
        assert!(CoeffIndex::new(3, vec![1]).is_err());
        assert!(CoeffIndex::new(1, vec![]).is_err());
        assert_eq!(idx(4, &[1, 2, 3]).order(), 6);
    }

    #[test]
    fn composition_lists() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert!(compositions(0, 1).is_empty());
        assert_eq!(compositions(3, 4).len(), 15);
    }

    #[test]
    fn e_examples() {
        for k in 0..6 {
            assert_eq!(e_coeff(&idx(2, &[k]), 1), int(1));
        }
        for k1 in 0..5 {
            for k2 in 0..5 {
                let i = idx(3, &[k1, k2]);
                assert_eq!(e_coeff(&i, 1), int(2).pow(k2 as u32));
                assert_eq!(e_coeff(&i, 2), int(-1).pow(k2 as u32));
            }
        }
    }

    #[test]
    fn d_and_c_examples() {
        for k in 0..8 {
            assert_eq!(d_coeff(&idx(2, &[k])), int(2));
            assert_eq!(c_coeff(&idx(2, &[k])), BigUint::from(1u8));
        }
        assert_eq!(d_coeff(&idx(3, &[0, 2])), int(9));
        assert_eq!(d_coeff(&idx(3, &[0, 0])), int(3));
        for m in 2..=7 {
            assert_eq!(c_coeff(&idx(m, &vec![0; m - 1])), BigUint::from(1u8));
        }
        for l in 0..8u32 {
            let expected = (2 * 2i64.pow(l) + (-1i64).pow(l)) / 3;
            assert_eq!(
                c_coeff(&idx(3, &[0, l as usize])),
                BigUint::from(expected as u64)
            );
        }
        for l1 in 0..6u32 {
            for l2 in 0..6u32 {
                let expected = (3i64.pow(l1) * 2i64.pow(l2) + 2i64.pow(l2) * (-1i64).pow(l1)) / 2;
                let i = idx(4, &[0, l2 as usize, l1 as usize]);
                assert_eq!(c_coeff(&i), BigUint::from(expected as u64));
            }
        }
    }

    #[test]
    fn positivity_and_divisibility_sweep() {
        for m in 2..=6 {
            for total in 0..=6 {
                for ks in compositions(m - 1, total) {
                    let i = idx(m, &ks);
                    let d = d_coeff(&i);
                    assert!(d.is_positive() && d.is_multiple_of(&int(m as i64)));
                    assert!(telescoping_holds(&i), "m={m} {ks:?}");
                }
            }
        }
    }

    #[test]
    fn e_is_constant_mod_m() {
        for m in 2..=6 {
            for ks in compositions(m - 1, 5) {
                let i = idx(m, &ks);
                let r = e_coeff(&i, 1).mod_floor(&int(m as i64));
                assert!((2..=m).all(|j| e_coeff(&i, j).mod_floor(&int(m as i64)) == r));
            }
        }
    }

    #[test]
    fn closed_forms_match_on_orbits() {
        assert!(closed_form_mismatches(3, 16).unwrap().is_empty());
        assert!(closed_form_mismatches(4, 16).unwrap().is_empty());
        assert!(displayed_coeff(5, &[0, 0, 0, 0]).is_err());
    }

    #[test]
    fn closed_forms_differ_without_orbit_sums() {
        // the display's first index is the computed last one
        assert_ne!(
            displayed_coeff(3, &[0, 2]).unwrap(),
            BigRational::from_integer(c_coeff(&idx(3, &[0, 2])).into())
        );
        assert_eq!(
            displayed_coeff(3, &[2, 0]).unwrap(),
            BigRational::from_integer(c_coeff(&idx(3, &[0, 2])).into())
        );
    }

    #[test]
    fn coefficient_table_shape() {
        let rows = coeff_table(3, 2).unwrap();
        assert_eq!(rows.len(), 1 + 2 + 3);
        assert!(rows.iter().all(|r| r.e.len() == 3));
        assert_eq!(rows[0].c, BigUint::from(1u8));
    }

    #[test]
    fn relation_small() {
        let r = verify_relation(3, 2, 1, None).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert_eq!(r.cases, 6);
        let planar = verify_relation(3, 2, 0, Some([2].into())).unwrap();
        assert!(planar.failures.is_empty());
        let d2 = Some([2].into());
        assert_eq!(
            relation_rhs(3, 2, 1, &d2).unwrap(),
            count_hypermaps(&query_with(CountQuery::hypermaps(2, 3, 1), &d2)).unwrap()
        );
    }

    #[test]
    fn asymptotics_small() {
        let planar = asymptotic_table(2, 0, &None, &[1, 2, 3, 4]).unwrap();
        assert!(planar
            .iter()
            .all(|r| r.ratio == BigRational::from_integer(int(1))));
        assert_eq!(planar.len(), 4);
        let torus = asymptotic_table(2, 1, &None, &[1, 2, 3, 4]).unwrap();
        assert_eq!(torus.iter().map(|r| r.n).collect::<Vec<_>>(), vec![3, 4]);
        assert!(torus
            .iter()
            .all(|r| r.ratio > BigRational::from_integer(int(1))));
    }

    proptest! {
        #[test]
        fn e_recursion(m in 2usize..=7, seed in prop::collection::vec(0usize..5, 6)) {
            let i = idx(m, &seed[..m - 1]);
            for j in 1..m {
                // e_{j+1} = (-j/(m-j))^{k_{m-j}} e_j
                let k = i.k(m - j);
                let lhs = BigRational::from_integer(e_coeff(&i, j + 1));
                let factor = BigRational::new(int(-(j as i64)), int((m - j) as i64));
                let rhs = num_traits::pow(factor, k as usize) * BigRational::from_integer(e_coeff(&i, j));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
