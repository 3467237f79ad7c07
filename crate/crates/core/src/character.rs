//! Irreducible characters of the symmetric group by the Murnaghan–Nakayama
//! rule, with a shared memo table, and the Frobenius count of factorizations.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;

use crate::beta::Abacus;
use crate::error::{Error, Result};
use crate::partition::{factorial_int, partitions, Partition};
use crate::poly::IntPoly;

/// One way of removing a border strip: what is left and the strip height
/// (rows spanned minus one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripRemoval {
    pub remaining: Partition,
    pub height: usize,
}

impl StripRemoval {
    pub fn sign(&self) -> i32 {
        if self.height.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Every removal of a border strip of length `k` from θ, ordered by the
/// source position of the jumping particle (largest first). Empty for `k = 0`.
pub fn border_strips(theta: &Partition, k: usize) -> Vec<StripRemoval> {
    if k == 0 {
        return Vec::new();
    }
    let base = Abacus::new(theta, k);
    let step = k as i64;
    base.jump_sources(step)
        .into_iter()
        .rev()
        .map(|p| {
            let height = base.between(p - step, p).count();
            let mut after = base.clone();
            after.jump(p, step);
            StripRemoval {
                remaining: after.to_partition(),
                height,
            }
        })
        .collect()
}

type CharKey = (Partition, Partition);

/// Memo table for χ^λ_μ keyed by (shape, remaining content).
///
/// Contents are consumed largest part first so that every key is canonical.
/// Readers share the lock; insertions are serialized. Since each entry is a
/// pure function of its key, the table contents do not depend on how
/// concurrent callers interleave.
#[derive(Default)]
pub struct CharacterTable {
    cache: RwLock<HashMap<CharKey, BigInt>>,
}

impl CharacterTable {
    pub fn new() -> Self {
        CharacterTable::default()
    }

    /// Process-wide table used by the free functions of this module.
    pub fn global() -> &'static CharacterTable {
        static TABLE: OnceLock<CharacterTable> = OnceLock::new();
        TABLE.get_or_init(CharacterTable::new)
    }

    pub fn chi(&self, lam: &Partition, mu: &Partition) -> Result<BigInt> {
        if lam.size() != mu.size() {
            return Err(Error::SizeMismatch {
                left: lam.size(),
                right: mu.size(),
            });
        }
        Ok(self.eval(lam, mu))
    }

    fn eval(&self, lam: &Partition, mu: &Partition) -> BigInt {
        let Some((&first, rest)) = mu.parts().split_first() else {
            return BigInt::one();
        };
        let key = (lam.clone(), mu.clone());
        if let Some(v) = self.cache.read().get(&key) {
            return v.clone();
        }
        let rest = Partition::new(rest.to_vec()).expect("suffix of a partition");
        let value = border_strips(lam, first)
            .into_iter()
            .fold(BigInt::zero(), |acc, s| {
                let sub = self.eval(&s.remaining, &rest);
                if s.sign() > 0 {
                    acc + sub
                } else {
                    acc - sub
                }
            });
        self.cache.write().insert(key, value.clone());
        value
    }

    pub fn len(&self) -> usize {
        self.cache.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Snapshot of all memoized values, sorted by key.
    pub fn entries(&self) -> Vec<(Partition, Partition, BigInt)> {
        let mut out: Vec<_> = self
            .cache
            .read()
            .iter()
            .map(|((l, m), v)| (l.clone(), m.clone(), v.clone()))
            .collect();
        out.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        out
    }

    /// Seeds the table with known values. Used when restoring a dump.
    pub fn extend(&self, entries: impl IntoIterator<Item = (Partition, Partition, BigInt)>) {
        let mut cache = self.cache.write();
        for (l, m, v) in entries {
            cache.insert((l, m), v);
        }
    }
}

/// χ^λ_μ from the global table.
pub fn chi(lam: &Partition, mu: &Partition) -> Result<BigInt> {
    CharacterTable::global().chi(lam, mu)
}

/// Murnaghan–Nakayama expansion consuming the parts of the content in the
/// order given, without memoization.
pub fn chi_in_order(lam: &Partition, content: &[usize]) -> Result<BigInt> {
    let total: usize = content.iter().sum();
    if total != lam.size() {
        return Err(Error::SizeMismatch {
            left: lam.size(),
            right: total,
        });
    }
    fn go(lam: &Partition, content: &[usize]) -> BigInt {
        match content.split_first() {
            None => BigInt::one(),
            Some((&k, rest)) => border_strips(lam, k)
                .iter()
                .map(|s| BigInt::from(s.sign()) * go(&s.remaining, rest))
                .sum(),
        }
    }
    Ok(go(lam, content))
}

/// Number of tuples `(τ_1, …, τ_k)` with `τ_i` of cycle type `betas[i]` and
/// `τ_1 ⋯ τ_k σ = id` for one fixed σ of cycle type `alpha`:
///
/// `Σ_θ (n!)^{-1} (f^θ)^{1-k} χ^θ_α ∏_i (n!/z_{β_i}) χ^θ_{β_i}`.
pub fn frobenius_count(alpha: &Partition, betas: &[Partition]) -> Result<BigUint> {
    let n = alpha.size();
    if let Some(b) = betas.iter().find(|b| b.size() != n) {
        return Err(Error::SizeMismatch {
            left: n,
            right: b.size(),
        });
    }
    let n_fact = factorial_int(n);
    let class_sizes: Vec<BigInt> = betas
        .iter()
        .map(|b| &n_fact / BigInt::from(b.z()))
        .collect();
    let k = betas.len() as i32;
    let terms = partitions(n)
        .par_iter()
        .map(|theta| -> Result<BigRational> {
            let f = BigInt::from(theta.dimension());
            let mut num = chi(theta, alpha)?;
            for (b, size) in betas.iter().zip(&class_sizes) {
                num *= size * chi(theta, b)?;
            }
            // (f^θ)^{1-k}
            let (num, den) = if k <= 1 {
                (num * f.pow((1 - k) as u32), BigInt::one())
            } else {
                (num, f.pow((k - 1) as u32))
            };
            Ok(BigRational::new(num, den))
        })
        .collect::<Result<Vec<_>>>()?;
    let total: BigRational = terms.into_iter().fold(BigRational::zero(), |a, b| a + b)
        / BigRational::from_integer(n_fact);
    exact_natural(&total, "frobenius_count")
}

/// `n! Σ_α z_α^{-1} χ^θ_α x^{l(α)}`, which equals `f^θ H_θ(x)`.
pub fn class_sum_poly(theta: &Partition) -> Result<IntPoly> {
    let n = theta.size();
    let n_fact = factorial_int(n);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for alpha in partitions(n) {
        let class = &n_fact / BigInt::from(alpha.z());
        coeffs[alpha.len()] += class * chi(theta, &alpha)?;
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

pub(crate) fn exact_integer(value: &BigRational, context: &str) -> Result<BigInt> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(Error::NonIntegral {
            context: context.to_string(),
            value: value.to_string(),
        })
    }
}

pub(crate) fn exact_natural(value: &BigRational, context: &str) -> Result<BigUint> {
    let v = exact_integer(value, context)?;
    if v.is_negative() {
        return Err(Error::NonIntegral {
            context: format!("{context} (negative)"),
            value: v.to_string(),
        });
    }
    Ok(v.magnitude().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::is_splittable;
    use crate::part;
    use itertools::Itertools;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn strips_from_figure_four() {
        // The particle at -1 jumps to -6 over -2, -4 and -5.
        let strips = border_strips(&part![4, 2, 2, 2, 1, 1], 5);
        assert!(strips.contains(&StripRemoval {
            remaining: part![4, 2, 1],
            height: 3
        }));
    }

    #[test]
    fn small_strip_lists() {
        assert_eq!(
            border_strips(&part![1], 1),
            vec![StripRemoval {
                remaining: part![],
                height: 0
            }]
        );
        assert_eq!(
            border_strips(&part![3, 1], 2),
            vec![StripRemoval {
                remaining: part![1, 1],
                height: 0
            }]
        );
        assert!(border_strips(&part![2, 1], 3).len() == 1);
        assert_eq!(border_strips(&part![2, 2], 3).len(), 1);
        assert!(border_strips(&part![2, 2], 2).len() == 2);
        assert!(border_strips(&part![3, 3], 5).is_empty());
        assert!(border_strips(&part![2], 0).is_empty());
    }

    /// Skew shape λ/μ as a set of cells, checked to be a ribbon by brute force.
    fn ribbon_height(lam: &Partition, mu: &Partition) -> Option<usize> {
        if (0..lam.len().max(mu.len())).any(|i| mu.part(i) > lam.part(i)) {
            return None;
        }
        let cells: Vec<(usize, usize)> = lam.cells().filter(|&(r, c)| c >= mu.part(r)).collect();
        if cells.is_empty() {
            return None;
        }
        let has = |r: usize, c: usize| cells.contains(&(r, c));
        // no 2x2 block
        if cells
            .iter()
            .any(|&(r, c)| has(r + 1, c) && has(r, c + 1) && has(r + 1, c + 1))
        {
            return None;
        }
        // edge connected
        let mut seen = vec![cells[0]];
        let mut stack = vec![cells[0]];
        while let Some((r, c)) = stack.pop() {
            let nbrs = [
                (r.wrapping_sub(1), c),
                (r + 1, c),
                (r, c.wrapping_sub(1)),
                (r, c + 1),
            ];
            for nb in nbrs {
                if cells.contains(&nb) && !seen.contains(&nb) {
                    seen.push(nb);
                    stack.push(nb);
                }
            }
        }
        if seen.len() != cells.len() {
            return None;
        }
        let rows = cells.iter().map(|c| c.0).unique().count();
        Some(rows - 1)
    }

    #[test]
    fn strips_match_exhaustive_skew_shapes() {
        for n in 1..=8 {
            for lam in partitions(n) {
                for k in 1..=n {
                    let mut expected: Vec<(Partition, usize)> = partitions(n - k)
                        .into_iter()
                        .filter_map(|mu| ribbon_height(&lam, &mu).map(|h| (mu, h)))
                        .collect();
                    expected.sort();
                    let mut got: Vec<(Partition, usize)> = border_strips(&lam, k)
                        .into_iter()
                        .map(|s| (s.remaining, s.height))
                        .collect();
                    got.sort();
                    assert_eq!(got, expected, "{lam:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn character_examples() {
        for mu in partitions(5) {
            assert_eq!(chi(&part![5], &mu).unwrap(), int(1));
        }
        assert_eq!(chi(&part![1, 1, 1], &part![2, 1]).unwrap(), int(-1));
        assert_eq!(chi(&part![3, 1], &part![2, 2]).unwrap(), int(-1));
        assert!(matches!(
            chi(&part![2], &part![1]),
            Err(Error::SizeMismatch { .. })
        ));
    }

    /// Signed count of ribbon tableaux of shape λ and content μ, enumerated
    /// from the skew-shape oracle above rather than from the beta-set.
    fn ribbon_tableaux_sum(lam: &Partition, content: &[usize]) -> i64 {
        match content.split_first() {
            None => 1,
            Some((&k, rest)) => partitions(lam.size() - k)
                .into_iter()
                .filter_map(|mu| ribbon_height(lam, &mu).map(|h| (mu, h)))
                .filter(|(mu, _)| lam.size() - mu.size() == k)
                .map(|(mu, h)| if h % 2 == 0 { 1 } else { -1 } * ribbon_tableaux_sum(&mu, rest))
                .sum(),
        }
    }

    #[test]
    fn characters_match_ribbon_tableaux_oracle() {
        for n in 1..=7 {
            for lam in partitions(n) {
                for mu in partitions(n) {
                    assert_eq!(
                        chi(&lam, &mu).unwrap(),
                        int(ribbon_tableaux_sum(&lam, mu.parts())),
                        "{lam:?} {mu:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn dimension_agrees_with_character_at_identity() {
        for n in 0..=10 {
            for p in partitions(n) {
                assert_eq!(
                    chi(&p, &Partition::ones(n)).unwrap(),
                    BigInt::from(p.dimension())
                );
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        for n in 1..=8 {
            let ps = partitions(n);
            for a in &ps {
                for b in &ps {
                    let s: BigInt = ps
                        .iter()
                        .map(|t| chi(t, a).unwrap() * chi(t, b).unwrap())
                        .sum();
                    let expected = if a == b {
                        BigInt::from(a.z())
                    } else {
                        BigInt::zero()
                    };
                    assert_eq!(s, expected, "{a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn content_order_does_not_matter() {
        for n in 1..=8 {
            for lam in partitions(n) {
                for mu in partitions(n) {
                    let mut reversed = mu.parts().to_vec();
                    reversed.reverse();
                    let mut rotated = mu.parts().to_vec();
                    rotated.rotate_left(1);
                    let expected = chi(&lam, &mu).unwrap();
                    assert_eq!(chi_in_order(&lam, &reversed).unwrap(), expected);
                    assert_eq!(chi_in_order(&lam, &rotated).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn characters_vanish_off_splittable_shapes() {
        for m in 2..=3 {
            for n in 1..=9 / m {
                for lam in partitions(n) {
                    let scaled = lam.scale(m);
                    for theta in partitions(m * n) {
                        if !is_splittable(&theta, m) {
                            assert!(
                                chi(&theta, &scaled).unwrap().is_zero(),
                                "{theta:?} {scaled:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(
            frobenius_count(&part![1, 1], &[part![2], part![2]]).unwrap(),
            1u32.into()
        );
        assert_eq!(
            frobenius_count(&part![2], &[part![2], part![2]]).unwrap(),
            0u32.into()
        );
        for alpha in partitions(4) {
            for beta in partitions(4) {
                let expected: BigUint = if alpha == beta {
                    One::one()
                } else {
                    Zero::zero()
                };
                assert_eq!(frobenius_count(&alpha, &[beta]).unwrap(), expected);
            }
        }
    }

    #[test]
    fn frobenius_size_mismatch() {
        assert!(frobenius_count(&part![2], &[part![1]]).is_err());
    }

    #[test]
    fn class_sum_matches_content_polynomial() {
        for n in 0..=6 {
            for theta in partitions(n) {
                let lhs = class_sum_poly(&theta).unwrap();
                let rhs = theta.content_poly().scale(&BigInt::from(theta.dimension()));
                assert_eq!(lhs, rhs, "{theta:?}");
            }
        }
    }

    #[test]
    fn private_table_is_independent() {
        let table = CharacterTable::new();
        assert!(table.is_empty());
        assert_eq!(table.chi(&part![2, 1], &part![1, 1, 1]).unwrap(), int(2));
        assert!(!table.is_empty());
        let entries = table.entries();
        let restored = CharacterTable::new();
        restored.extend(entries.clone());
        assert_eq!(restored.entries(), entries);
    }
}
