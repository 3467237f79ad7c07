use std::collections::BTreeSet;

use hypercount::census::{count_constellations, count_hypermaps, rc_census, rh_census, CountQuery};
use hypercount::oracle::{brute_constellation_run, brute_hypermap_run, marked_counts};

const CASES: [(usize, usize); 7] = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3)];

fn degree_sets() -> Vec<Option<BTreeSet<usize>>> {
    let mut out = vec![None];
    for mask in 0u32..8 {
        out.push(Some(
            (1..=3).filter(|d| mask & (1 << (d - 1)) != 0).collect(),
        ));
    }
    out
}

fn mark_vectors(len: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                let used: usize = v.iter().sum();
                (0..=max_total - used).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn raw_censuses_match_enumeration() {
    for (m, n) in CASES {
        assert_eq!(
            rc_census(n, m).unwrap(),
            brute_constellation_run(n, m).unwrap().raw,
            "C m={m} n={n}"
        );
        assert_eq!(
            rh_census(n, m).unwrap(),
            brute_hypermap_run(n, m).unwrap().raw,
            "H m={m} n={n}"
        );
    }
}

#[test]
fn rooted_counts_match_enumeration() {
    for (m, n) in CASES {
        let c = brute_constellation_run(n, m).unwrap().transitive;
        let h = brute_hypermap_run(n, m).unwrap().transitive;
        let max_genus = c
            .entries
            .keys()
            .chain(h.entries.keys())
            .map(|k| k.genus)
            .max()
            .unwrap();
        for genus in 0..=max_genus + 1 {
            for degrees in degree_sets() {
                let mut hq = CountQuery::hypermaps(m, n, genus);
                hq.degrees = degrees.clone();
                assert_eq!(
                    count_hypermaps(&hq).unwrap(),
                    marked_counts(&h, &hq).unwrap(),
                    "{hq:?}"
                );
                for marks in mark_vectors(m - 1, 2) {
                    let mut cq = CountQuery::constellations(m, n, genus).with_marks(marks);
                    cq.degrees = degrees.clone();
                    assert_eq!(
                        count_constellations(&cq).unwrap(),
                        marked_counts(&c, &cq).unwrap(),
                        "{cq:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn planar_hypermaps_are_constellations() {
    for (m, n) in CASES {
        for degrees in degree_sets() {
            let mut hq = CountQuery::hypermaps(m, n, 0);
            hq.degrees = degrees.clone();
            let mut cq = CountQuery::constellations(m, n, 0);
            cq.degrees = degrees;
            assert_eq!(
                count_hypermaps(&hq).unwrap(),
                count_constellations(&cq).unwrap(),
                "m={m} n={n}"
            );
        }
    }
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[test]
fn marks_are_symmetric_across_colors() {
    for (m, n) in CASES {
        for genus in 0..=2 {
            for marks in mark_vectors(m - 1, 3) {
                let mut padded = marks.clone();
                padded.push(0);
                let base = count_constellations(
                    &CountQuery::constellations(m, n, genus).with_marks(marks),
                )
                .unwrap();
                for perm in permutations(&padded) {
                    let q = CountQuery::constellations(m, n, genus).with_marks(perm);
                    assert_eq!(count_constellations(&q).unwrap(), base, "{q:?}");
                }
            }
        }
    }
}
