//! Factorization of characters at `mλ` over the m-split, and the matching
//! factorization of the content polynomial.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::beta::{m_split, sign_theta};
use crate::character::{chi, exact_integer};
use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};

/// An ordered tuple of partitions whose parts, pooled, are exactly λ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Decomposition {
    pub components: Vec<Partition>,
}

/// Every way to distribute the parts of λ into `sizes.len()` components of
/// the prescribed sizes. Equal parts are indistinguishable, so each
/// decomposition appears once.
pub fn decompositions(lam: &Partition, sizes: &[usize]) -> Vec<Decomposition> {
    if sizes.iter().sum::<usize>() != lam.size() {
        return Vec::new();
    }
    let groups: Vec<(usize, usize)> = lam.multiplicities().into_iter().rev().collect();
    let mut out = Vec::new();
    let mut counts = vec![vec![0usize; groups.len()]; sizes.len()];
    let mut filled = vec![0usize; sizes.len()];
    distribute(&groups, 0, sizes, &mut counts, &mut filled, &mut out);
    out
}

fn distribute(
    groups: &[(usize, usize)],
    g: usize,
    sizes: &[usize],
    counts: &mut Vec<Vec<usize>>,
    filled: &mut Vec<usize>,
    out: &mut Vec<Decomposition>,
) {
    if g == groups.len() {
        if filled.as_slice() == sizes {
            let components = counts
                .iter()
                .map(|row| {
                    let parts = groups
                        .iter()
                        .zip(row)
                        .flat_map(|(&(value, _), &c)| std::iter::repeat_n(value, c))
                        .collect();
                    Partition::new(parts).expect("parts emitted in decreasing order")
                })
                .collect();
            out.push(Decomposition { components });
        }
        return;
    }
    let (value, mult) = groups[g];
    place(groups, g, value, mult, 0, sizes, counts, filled, out);
}

/// Spreads the `left` remaining copies of `value` over components `slot..`.
#[allow(clippy::too_many_arguments)]
fn place(
    groups: &[(usize, usize)],
    g: usize,
    value: usize,
    left: usize,
    slot: usize,
    sizes: &[usize],
    counts: &mut Vec<Vec<usize>>,
    filled: &mut Vec<usize>,
    out: &mut Vec<Decomposition>,
) {
    if slot + 1 == sizes.len() {
        if filled[slot] + left * value <= sizes[slot] {
            counts[slot][g] = left;
            filled[slot] += left * value;
            distribute(groups, g + 1, sizes, counts, filled, out);
            filled[slot] -= left * value;
            counts[slot][g] = 0;
        }
        return;
    }
    let room = (sizes[slot] - filled[slot]) / value;
    for c in (0..=left.min(room)).rev() {
        counts[slot][g] = c;
        filled[slot] += c * value;
        place(
            groups,
            g,
            value,
            left - c,
            slot + 1,
            sizes,
            counts,
            filled,
            out,
        );
        filled[slot] -= c * value;
        counts[slot][g] = 0;
    }
}

/// `z_λ · sgn_θ · Σ ∏_i χ^{θ^(i)}_{λ^(i)} / z_{λ^(i)}`, summed over all
/// decompositions of λ matching the sizes of the m-split of θ.
pub fn littlewood_rhs(theta: &Partition, lam: &Partition, m: usize) -> Result<BigInt> {
    if theta.size() != m * lam.size() {
        return Err(Error::SizeMismatch {
            left: theta.size(),
            right: m * lam.size(),
        });
    }
    let split = m_split(theta, m)?.ok_or_else(|| Error::NotSplittable {
        theta: theta.clone(),
        m,
    })?;
    let sign = sign_theta(theta, m)?;
    let sizes: Vec<usize> = split.iter().map(Partition::size).collect();
    let mut sum = BigRational::zero();
    for d in decompositions(lam, &sizes) {
        let mut term = BigRational::one();
        for (shape, content) in split.iter().zip(&d.components) {
            let c = chi(shape, content)?;
            if c.is_zero() {
                term = BigRational::zero();
                break;
            }
            term *= BigRational::new(c, BigInt::from(content.z()));
        }
        sum += term;
    }
    sum *= BigRational::from_integer(BigInt::from(lam.z()) * BigInt::from(sign));
    exact_integer(&sum, "littlewood_rhs")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LittlewoodFailure {
    pub theta: Partition,
    pub lambda: Partition,
    pub chi: String,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LittlewoodReport {
    pub m: usize,
    pub max_size: usize,
    pub checked: usize,
    pub splittable: usize,
    pub failures: Vec<LittlewoodFailure>,
}

/// Checks `χ^θ_{mλ}` against the factorized form for every θ ⊢ mn, λ ⊢ n
/// with `1 ≤ mn ≤ max_size`; non-splittable θ must give zero.
pub fn verify_littlewood(max_size: usize, m: usize) -> Result<LittlewoodReport> {
    if m < 2 {
        return Err(Error::InvalidModulus { m, min: 2 });
    }
    let mut cases = Vec::new();
    for n in 1..=max_size / m {
        for theta in partitions(m * n) {
            for lam in partitions(n) {
                cases.push((theta.clone(), lam));
            }
        }
    }
    let outcomes = cases
        .par_iter()
        .map(
            |(theta, lam)| -> Result<(bool, Option<LittlewoodFailure>)> {
                let value = chi(theta, &lam.scale(m))?;
                let (splittable, expected) = match m_split(theta, m)? {
                    Some(_) => (true, littlewood_rhs(theta, lam, m)?),
                    None => (false, BigInt::zero()),
                };
                let failure = (value != expected).then(|| LittlewoodFailure {
                    theta: theta.clone(),
                    lambda: lam.clone(),
                    chi: value.to_string(),
                    expected: expected.to_string(),
                });
                Ok((splittable, failure))
            },
        )
        .collect::<Result<Vec<_>>>()?;
    Ok(LittlewoodReport {
        m,
        max_size,
        checked: outcomes.len(),
        splittable: outcomes.iter().filter(|o| o.0).count(),
        failures: outcomes.into_iter().filter_map(|o| o.1).collect(),
    })
}

/// Residue class of the m-split that plays the role of component `i`
/// (1-based) in the content factorization: class `m - i`, so class 0 is
/// component m.
pub fn content_component_class(i: usize, m: usize) -> usize {
    (m - i % m) % m
}

/// Checks `H_θ(x) = m^{|θ|} ∏_{i=1}^{m} ∏_{j=0}^{m-1} H_{θ^(i)}((x - i + j + 1)/m)`
/// by evaluating both sides at `|θ| + 1` integer points.
pub fn verify_content_factorization(theta: &Partition, m: usize) -> Result<bool> {
    content_factorization_with(theta, m, content_component_class)
}

fn content_factorization_with(
    theta: &Partition,
    m: usize,
    class_of: fn(usize, usize) -> usize,
) -> Result<bool> {
    let split = m_split(theta, m)?.ok_or_else(|| Error::NotSplittable {
        theta: theta.clone(),
        m,
    })?;
    let h_theta = theta.content_poly();
    let component_polys: BTreeMap<usize, _> = (1..=m)
        .map(|i| (i, split[class_of(i, m)].content_poly()))
        .collect();
    let scale = BigRational::from_integer(BigInt::from(m).pow(theta.size() as u32));
    let m_q = BigRational::from_integer(BigInt::from(m));
    let size = theta.size() as i64;
    for x in -size / 2..=size - size / 2 {
        let xq = BigRational::from_integer(BigInt::from(x));
        let lhs = h_theta.eval_rational(&xq);
        let mut rhs = scale.clone();
        for (&i, poly) in &component_polys {
            for j in 0..m {
                let shift = BigRational::from_integer(BigInt::from(j as i64 - i as i64 + 1));
                rhs *= poly.eval_rational(&((&xq + shift) / &m_q));
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::is_splittable;
    use crate::part;

    fn d(components: Vec<Partition>) -> Decomposition {
        Decomposition { components }
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(
            decompositions(&part![1, 1], &[1, 1]),
            vec![d(vec![part![1], part![1]])]
        );
        assert_eq!(
            decompositions(&part![2, 1], &[2, 1]),
            vec![d(vec![part![2], part![1]])]
        );
        let mut got = decompositions(&part![2, 1, 1], &[2, 2]);
        got.sort();
        let mut expected = vec![
            d(vec![part![2], part![1, 1]]),
            d(vec![part![1, 1], part![2]]),
        ];
        expected.sort();
        assert_eq!(got, expected);
        assert!(decompositions(&part![3], &[1, 2]).is_empty());
        assert_eq!(decompositions(&part![], &[0, 0, 0]).len(), 1);
    }

    /// Assigns each part (as a labelled object) to a component and dedups,
    /// independently of the multiplicity-based generator.
    fn brute_decompositions(lam: &Partition, sizes: &[usize]) -> Vec<Decomposition> {
        let parts = lam.parts();
        let m = sizes.len();
        let mut out = std::collections::BTreeSet::new();
        let total = m.pow(parts.len() as u32);
        for code in 0..total {
            let mut comps = vec![Vec::new(); m];
            let mut c = code;
            for &p in parts {
                comps[c % m].push(p);
                c /= m;
            }
            let comps: Vec<Partition> = comps.into_iter().map(Partition::from_unsorted).collect();
            if comps.iter().map(Partition::size).collect::<Vec<_>>() == sizes {
                out.insert(d(comps));
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn decompositions_match_brute_force() {
        for n in 0..=7 {
            for lam in partitions(n) {
                for a in 0..=n {
                    for b in 0..=n - a {
                        let sizes = [a, b, n - a - b];
                        let mut got = decompositions(&lam, &sizes);
                        got.sort();
                        assert_eq!(got, brute_decompositions(&lam, &sizes), "{lam:?} {sizes:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(
            littlewood_rhs(&part![2], &part![1], 2).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            littlewood_rhs(&part![1, 1], &part![1], 2).unwrap(),
            BigInt::from(-1)
        );
        let direct = chi(&part![2, 1, 1], &part![4]).unwrap();
        assert_eq!(
            littlewood_rhs(&part![2, 1, 1], &part![2], 2).unwrap(),
            direct
        );
    }

    #[test]
    fn rhs_rejects_bad_input() {
        assert!(matches!(
            littlewood_rhs(&part![2, 1], &part![1], 2),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(matches!(
            littlewood_rhs(&part![3, 2, 1], &part![3], 2),
            Err(Error::NotSplittable { .. })
        ));
    }

    #[test]
    fn small_sweeps_hold() {
        let r = verify_littlewood(4, 2).unwrap();
        assert!(r.failures.is_empty());
        // θ ⊢ 2 with λ=(1), θ ⊢ 4 with two λ's
        assert_eq!(r.checked, 2 + 5 * 2);
        let r2 = verify_littlewood(2, 2).unwrap();
        assert_eq!(r2.splittable, 2, "(2) and (1,1) are both 2-splittable");
    }

    #[test]
    fn sweeps_hold_up_to_nine() {
        for m in [2, 3] {
            let r = verify_littlewood(9, m).unwrap();
            assert!(r.failures.is_empty(), "m={m}: {:?}", r.failures);
            assert!(r.splittable > 0 && r.splittable < r.checked);
        }
    }

    #[test]
    fn sweep_m4_size_twelve() {
        let r = verify_littlewood(12, 4).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn sweep_rejects_small_modulus() {
        assert!(matches!(
            verify_littlewood(4, 1),
            Err(Error::InvalidModulus { .. })
        ));
    }

    #[test]
    fn component_class_mapping() {
        assert_eq!(content_component_class(1, 3), 2);
        assert_eq!(content_component_class(2, 3), 1);
        assert_eq!(content_component_class(3, 3), 0);
        assert_eq!(content_component_class(1, 2), 1);
    }

    #[test]
    fn content_factorization_examples() {
        assert!(verify_content_factorization(&part![2], 2).unwrap());
        assert!(verify_content_factorization(&part![], 3).unwrap());
        assert!(verify_content_factorization(&part![6, 6, 4, 4, 4, 3, 3], 3).unwrap());
        assert!(matches!(
            verify_content_factorization(&part![2, 1], 2),
            Err(Error::NotSplittable { .. })
        ));
    }

    #[test]
    fn content_factorization_detects_wrong_offsets() {
        // attaching class i-1 to component i gives x(x-1) for (2)
        assert!(!content_factorization_with(&part![2], 2, |i, _| i - 1).unwrap());
        assert!(!content_factorization_with(&part![1, 1], 2, |i, _| i - 1).unwrap());
    }

    #[test]
    fn content_factorization_sweep() {
        for m in 2..=4 {
            for n in 0..=12 {
                for theta in partitions(n) {
                    if is_splittable(&theta, m) {
                        assert!(
                            verify_content_factorization(&theta, m).unwrap(),
                            "{theta:?} m={m}"
                        );
                    }
                }
            }
        }
    }
}
