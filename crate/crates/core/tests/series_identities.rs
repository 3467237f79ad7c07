use hypercount::census::{raw_series, rc_census, rh_census, Census, MapKind};
use hypercount::series::{q, Image, LinearForm, Series, Substitution, Var};

fn rc_series(m: usize, n_max: usize) -> Series {
    let raws: Vec<_> = (1..=n_max).map(|n| rc_census(n, m).unwrap()).collect();
    raw_series(&raws, n_max as u32)
}

fn rh_series(m: usize, n_max: usize) -> Series {
    let raws: Vec<_> = (1..=n_max).map(|n| rh_census(n, m).unwrap()).collect();
    raw_series(&raws, n_max as u32)
}

fn scale_y(sub: &mut Substitution, m: usize, n_max: usize) {
    for i in 1..=n_max {
        sub.set(Var::Y(i), Image::Scale(q(1, m as i64)));
    }
}

/// `1 + R_H(x) = ∏_j (1 + R_C(x_i ← (x - j + i)/m, y_i ← y_i/m, z ← m^m z))`.
fn check_product_formula(m: usize, n_max: usize) {
    let one = Series::one(n_max as u32, 0);
    let lhs = one.add(&rh_series(m, n_max));
    let rc = rc_series(m, n_max);
    let mut rhs = one.clone();
    let mm = q(m as i64, 1);
    for j in 1..=m {
        let mut sub = Substitution::new();
        for i in 1..=m {
            let form = LinearForm::new(
                vec![q(1, m as i64)],
                q(0, 1),
                q(i as i64 - j as i64, m as i64),
            );
            sub.set(Var::X(i), Image::Affine(form));
        }
        scale_y(&mut sub, m, n_max);
        sub.set(Var::Z, Image::Scale(num_traits::pow(mm.clone(), m)));
        rhs = rhs.mul(&one.add(&rc.substitute(&sub).unwrap()));
    }
    assert_eq!(lhs, rhs, "m={m} n<={n_max}");
}

#[test]
fn hypermap_series_factors_over_constellations() {
    check_product_formula(2, 3);
    check_product_formula(3, 2);
    check_product_formula(4, 1);
}

/// `H = m Σ_j C(x_i ← (x + (i - j)u)/m, y_i ← y_i/m, z ← m^{m-1} z, u)`.
fn check_rooted_relation(m: usize, n_max: usize, max_u: u32) {
    let h = Census::build(MapKind::Hypermap, m, n_max)
        .unwrap()
        .generating_series(max_u)
        .unwrap();
    let c = Census::build(MapKind::Constellation, m, n_max)
        .unwrap()
        .generating_series(max_u)
        .unwrap();
    let mut rhs = Series::zero(n_max as u32, max_u);
    for j in 1..=m {
        let mut sub = Substitution::new();
        for i in 1..=m {
            let form = LinearForm::new(
                vec![q(1, m as i64)],
                q(i as i64 - j as i64, m as i64),
                q(0, 1),
            );
            sub.set(Var::X(i), Image::Affine(form));
        }
        scale_y(&mut sub, m, n_max);
        sub.set(Var::Z, Image::Scale(num_traits::pow(q(m as i64, 1), m - 1)));
        rhs = rhs.add(&c.substitute(&sub).unwrap());
    }
    rhs = rhs.scale(&q(m as i64, 1));
    assert_eq!(h, rhs, "m={m} n<={n_max}");
}

#[test]
fn rooted_hypermaps_from_constellations() {
    check_rooted_relation(2, 4, 4);
    check_rooted_relation(3, 3, 4);
}

#[test]
fn rooted_relation_truncated_in_genus() {
    // truncating u keeps the low-genus part of the identity intact
    check_rooted_relation(2, 4, 2);
    check_rooted_relation(3, 2, 0);
}
