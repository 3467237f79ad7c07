//! Truncated multivariate power series with exact rational coefficients.
//!
//! Variables are `z`, `u`, an indexed family `x1, x2, ...` and an indexed
//! family `y1, y2, ...`. Only `z` and `u` are truncated; the x and y degrees
//! are bounded by whatever the inputs carry.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    z: u32,
    u: u32,
    x: Vec<u32>,
    y: Vec<u32>,
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn set_slot(v: &mut Vec<u32>, i: usize, e: u32) {
    assert!(i >= 1, "variable indices are 1-based");
    if v.len() < i {
        v.resize(i, 0);
    }
    v[i - 1] = e;
    trim(v);
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn new(z: u32, u: u32, x: Vec<u32>, y: Vec<u32>) -> Self {
        let mut m = Monomial { z, u, x, y };
        trim(&mut m.x);
        trim(&mut m.y);
        m
    }

    pub fn z(mut self, e: u32) -> Self {
        self.z = e;
        self
    }

    pub fn u(mut self, e: u32) -> Self {
        self.u = e;
        self
    }

    /// Sets the exponent of `x_i` (1-based).
    pub fn x(mut self, i: usize, e: u32) -> Self {
        set_slot(&mut self.x, i, e);
        self
    }

    /// Sets the exponent of `y_i` (1-based).
    pub fn y(mut self, i: usize, e: u32) -> Self {
        set_slot(&mut self.y, i, e);
        self
    }

    pub fn z_deg(&self) -> u32 {
        self.z
    }

    pub fn u_deg(&self) -> u32 {
        self.u
    }

    pub fn x_deg(&self, i: usize) -> u32 {
        self.x.get(i - 1).copied().unwrap_or(0)
    }

    pub fn y_deg(&self, i: usize) -> u32 {
        self.y.get(i - 1).copied().unwrap_or(0)
    }

    pub fn x_degrees(&self) -> &[u32] {
        &self.x
    }

    pub fn y_degrees(&self) -> &[u32] {
        &self.y
    }

    pub fn is_one(&self) -> bool {
        *self == Monomial::one()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let add = |a: &[u32], b: &[u32]| -> Vec<u32> {
            (0..a.len().max(b.len()))
                .map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0))
                .collect()
        };
        Monomial {
            z: self.z + other.z,
            u: self.u + other.u,
            x: add(&self.x, &other.x),
            y: add(&self.y, &other.y),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z^{} u^{}", self.z, self.u)?;
        for (i, e) in self.x.iter().enumerate().filter(|(_, e)| **e > 0) {
            write!(f, " x{}^{}", i + 1, e)?;
        }
        for (i, e) in self.y.iter().enumerate().filter(|(_, e)| **e > 0) {
            write!(f, " y{}^{}", i + 1, e)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    terms: BTreeMap<Monomial, BigRational>,
    max_z: u32,
    max_u: u32,
}

type Terms = BTreeMap<Monomial, BigRational>;

fn accumulate(terms: &mut Terms, mono: Monomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(mono) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn mul_terms(a: &Terms, b: &Terms, max_z: u32, max_u: u32) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if ma.z + mb.z > max_z || ma.u + mb.u > max_u {
                continue;
            }
            accumulate(&mut out, ma.mul(mb), ca * cb);
        }
    }
    out
}

impl Series {
    pub fn zero(max_z: u32, max_u: u32) -> Self {
        Series {
            terms: Terms::new(),
            max_z,
            max_u,
        }
    }

    pub fn one(max_z: u32, max_u: u32) -> Self {
        Series::constant(BigRational::one(), max_z, max_u)
    }

    pub fn constant(c: BigRational, max_z: u32, max_u: u32) -> Self {
        Series::monomial(Monomial::one(), c, max_z, max_u)
    }

    /// A single term; silently zero if it lies beyond the truncation.
    pub fn monomial(mono: Monomial, c: BigRational, max_z: u32, max_u: u32) -> Self {
        let mut s = Series::zero(max_z, max_u);
        s.add_term(mono, c);
        s
    }

    pub fn from_terms<I>(terms: I, max_z: u32, max_u: u32) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut s = Series::zero(max_z, max_u);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Adds `c · mono` in place, dropping it if beyond the truncation.
    pub fn add_term(&mut self, mono: Monomial, c: BigRational) {
        if mono.z <= self.max_z && mono.u <= self.max_u {
            accumulate(&mut self.terms, mono, c);
        }
    }

    pub fn max_z(&self) -> u32 {
        self.max_z
    }

    pub fn max_u(&self) -> u32 {
        self.max_u
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Monomial) -> Result<BigRational> {
        if mono.z > self.max_z || mono.u > self.max_u {
            return Err(Error::OutOfTruncation {
                z: mono.z,
                u: mono.u,
                max_z: self.max_z,
                max_u: self.max_u,
            });
        }
        Ok(self
            .terms
            .get(mono)
            .cloned()
            .unwrap_or_else(BigRational::zero))
    }

    /// Re-truncates to the given bounds, which must not exceed the current ones.
    pub fn truncate(&self, max_z: u32, max_u: u32) -> Series {
        let max_z = max_z.min(self.max_z);
        let max_u = max_u.min(self.max_u);
        Series::from_terms(self.terms.clone(), max_z, max_u)
    }

    fn bounds_with(&self, other: &Series) -> (u32, u32) {
        (self.max_z.min(other.max_z), self.max_u.min(other.max_u))
    }

    pub fn add(&self, other: &Series) -> Series {
        let (nz, nu) = self.bounds_with(other);
        let mut out = self.truncate(nz, nu);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Series {
        Series::from_terms(
            self.terms.iter().map(|(m, v)| (m.clone(), v * c)),
            self.max_z,
            self.max_u,
        )
    }

    /// Truncated product; the result carries the tighter of the two bounds.
    pub fn mul(&self, other: &Series) -> Series {
        let (nz, nu) = self.bounds_with(other);
        Series {
            terms: mul_terms(&self.terms, &other.terms, nz, nu),
            max_z: nz,
            max_u: nu,
        }
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Series {
        Series {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            max_z: self.max_z,
            max_u: self.max_u,
        }
    }

    /// Requires every term to carry a positive power of z or u, so that
    /// powers of the series eventually leave the truncation.
    fn check_nilpotent(&self) -> Result<()> {
        if self.terms.keys().any(|m| m.z == 0 && m.u == 0) {
            return Err(Error::NonZeroConstant);
        }
        Ok(())
    }

    fn power_series(&self, coeff: impl Fn(u32) -> BigRational) -> Result<Series> {
        self.check_nilpotent()?;
        let mut out = Series::zero(self.max_z, self.max_u);
        let mut power = self.clone();
        for k in 1..=(self.max_z + self.max_u).max(1) {
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&coeff(k)));
            power = power.mul(self);
        }
        Ok(out)
    }

    /// `log(1 + a)`.
    pub fn log1p(&self) -> Result<Series> {
        self.power_series(|k| {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            BigRational::new(BigInt::from(sign), BigInt::from(k))
        })
    }

    /// `exp(a) - 1`.
    pub fn exp_minus_one(&self) -> Result<Series> {
        let mut fact = vec![BigInt::one()];
        for k in 1..=(self.max_z + self.max_u + 1) {
            let next = &fact[k as usize - 1] * BigInt::from(k);
            fact.push(next);
        }
        self.power_series(|k| BigRational::new(BigInt::one(), fact[k as usize].clone()))
    }

    /// `z ∂/∂z`.
    pub fn z_dz(&self) -> Series {
        Series::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), c * BigRational::from_integer(BigInt::from(m.z)))),
            self.max_z,
            self.max_u,
        )
    }

    /// Replaces variables according to `sub`; unmapped variables stay put.
    pub fn substitute(&self, sub: &Substitution) -> Result<Series> {
        for (var, image) in &sub.map {
            if let (Var::Y(_) | Var::Z | Var::U, Image::Affine(_)) = (var, image) {
                return Err(Error::UnsupportedSubstitution(format!(
                    "{var} may only be rescaled"
                )));
            }
            if let Var::X(0) | Var::Y(0) = var {
                return Err(Error::UnsupportedSubstitution(
                    "variable indices are 1-based".into(),
                ));
            }
        }
        let (max_z, max_u) = (self.max_z, self.max_u);
        let scalar = |var: Var| -> Option<&BigRational> {
            match sub.map.get(&var) {
                Some(Image::Scale(c)) => Some(c),
                _ => None,
            }
        };
        let mut powers: HashMap<(usize, u32), Terms> = HashMap::new();
        let mut out = Series::zero(max_z, max_u);
        for (mono, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Monomial::one().z(mono.z).u(mono.u);
            for (var, e) in [(Var::Z, mono.z), (Var::U, mono.u)] {
                if let Some(s) = scalar(var) {
                    coeff *= pow_q(s, e);
                }
            }
            for (i, &e) in mono.y.iter().enumerate() {
                kept = kept.y(i + 1, e);
                if let Some(s) = scalar(Var::Y(i + 1)) {
                    coeff *= pow_q(s, e);
                }
            }
            let mut expanded: Terms = Terms::new();
            let mut affine = Vec::new();
            for (i, &e) in mono.x.iter().enumerate() {
                match sub.map.get(&Var::X(i + 1)) {
                    Some(Image::Affine(form)) if e > 0 => affine.push((i + 1, e, form)),
                    Some(Image::Scale(s)) => {
                        coeff *= pow_q(s, e);
                        kept = kept.x(i + 1, e);
                    }
                    _ => kept = kept.x(i + 1, e),
                }
            }
            expanded.insert(kept, coeff);
            for (i, e, form) in affine {
                let p = powers
                    .entry((i, e))
                    .or_insert_with(|| form_power(form, e, max_u));
                expanded = mul_terms(&expanded, p, max_z, max_u);
            }
            for (m, v) in expanded {
                out.add_term(m, v);
            }
        }
        Ok(out)
    }
}

fn pow_q(c: &BigRational, e: u32) -> BigRational {
    num_traits::pow(c.clone(), e as usize)
}

fn form_power(form: &LinearForm, e: u32, max_u: u32) -> Terms {
    let base = form.terms();
    let mut acc: Terms = [(Monomial::one(), BigRational::one())]
        .into_iter()
        .collect();
    for _ in 0..e {
        acc = mul_terms(&acc, &base, u32::MAX, max_u);
    }
    acc
}

impl fmt::Display for Series {
    /// One term per line, `coeff * z^a u^b x1^c ... y1^d ...`, in exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, c) in &self.terms {
            writeln!(f, "{c} * {m}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(usize),
    Y(usize),
    Z,
    U,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
            Var::Z => write!(f, "z"),
            Var::U => write!(f, "u"),
        }
    }
}

/// `Σ x[i]·x_{i+1} + u·u + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub x: Vec<BigRational>,
    pub u: BigRational,
    pub constant: BigRational,
}

impl LinearForm {
    pub fn new(x: Vec<BigRational>, u: BigRational, constant: BigRational) -> Self {
        LinearForm { x, u, constant }
    }

    /// The form `x_i` itself.
    pub fn var(i: usize) -> Self {
        let mut x = vec![BigRational::zero(); i];
        x[i - 1] = BigRational::one();
        LinearForm::new(x, BigRational::zero(), BigRational::zero())
    }

    fn terms(&self) -> Terms {
        let mut t = Terms::new();
        for (i, c) in self.x.iter().enumerate() {
            accumulate(&mut t, Monomial::one().x(i + 1, 1), c.clone());
        }
        accumulate(&mut t, Monomial::one().u(1), self.u.clone());
        accumulate(&mut t, Monomial::one(), self.constant.clone());
        t
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Image {
    Scale(BigRational),
    Affine(LinearForm),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Var, Image>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn with(mut self, var: Var, image: Image) -> Self {
        self.map.insert(var, image);
        self
    }

    pub fn set(&mut self, var: Var, image: Image) {
        self.map.insert(var, image);
    }
}

/// Shorthand for an exact rational `n/d`.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else if r.is_negative() {
        format!("-{}/{}", -r.numer(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
