//! The generalized Pell equation `N(s_0 + s_1 m^(1/n) + ...) = ±1`.
//!
//! Parametrized unit families in degrees 3, 5, 7, 9 and 11 are instantiated
//! from their coefficient tables for parameters `(k, r)`, and verified by
//! computing the norm as an exact determinant. Failures are data: a family
//! that does not give a unit comes back with its residual norm.
//!
//! Degree-n families with `n >= 5` share one shape. With `t = r k^(n-1)`,
//! branches 1 and 3 are monomial, `s_i = ±c_i r k^(n-1-i)`, and branches 2 and
//! 4 are their inverses, `s_0 = P_0(t)` and `s_i = r k^(n-1-i) P_i(t)`. The
//! sign pattern alternates in branch 2 and is all-plus in branch 4.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigmath::{big, int, pow, rational_text, Rational};
use crate::error::{Error, Result};
use crate::forms::{binomial, NmForm};

/// `s_0^3 + s_1^3 m + s_2^3 m^2 - 3 s_0 s_1 s_2 m`.
pub fn norm3_closed(s0: &Rational, s1: &Rational, s2: &Rational, m: &Rational) -> Rational {
    let three = int(3);
    pow(s0, 3) + pow(s1, 3) * m + pow(s2, 3) * m * m - three * s0 * s1 * s2 * m
}

/// The expanded degree-5 norm, term by term.
pub fn norm5_closed(s: &[Rational; 5], m: &Rational) -> Rational {
    let [s0, s1, s2, s3, s4] = s;
    let m2 = m * m;
    let m3 = &m2 * m;
    let m4 = &m3 * m;
    let p = |x: &Rational, e: u32| pow(x, e);

    let fifth = p(s0, 5) + p(s1, 5) * m + p(s2, 5) * &m2 + p(s3, 5) * &m3 + p(s4, 5) * &m4;
    let cubic = p(s0, 3) * s1 * s4 * m
        + p(s0, 3) * s2 * s3 * m
        + p(s1, 3) * s0 * s2 * m
        + p(s1, 3) * s3 * s4 * &m2
        + p(s2, 3) * s0 * s4 * &m2
        + p(s2, 3) * s1 * s3 * &m2
        + p(s3, 3) * s0 * s1 * &m2
        + p(s3, 3) * s2 * s4 * &m3
        + p(s4, 3) * s0 * s3 * &m3
        + p(s4, 3) * s1 * s2 * &m3;
    let square = p(s0, 2) * p(s1, 2) * s3 * m
        + p(s0, 2) * s2 * p(s4, 2) * &m2
        + s1 * p(s0, 2) * p(s2, 2) * m
        + s4 * p(s0, 2) * p(s3, 2) * &m2
        + s0 * p(s4, 2) * p(s1, 2) * &m2
        + s0 * p(s2, 2) * p(s3, 2) * &m2
        + p(s1, 2) * s4 * p(s2, 2) * &m2
        + s2 * p(s1, 2) * p(s3, 2) * &m2
        + s1 * p(s3, 2) * p(s4, 2) * &m3
        + p(s4, 2) * p(s2, 2) * s3 * &m3;
    let five = int(5);
    fifth - &five * cubic + &five * square - five * s0 * s1 * s2 * s3 * s4 * &m2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    #[serde(rename = "1")]
    B1,
    #[serde(rename = "2")]
    B2,
    #[serde(rename = "3")]
    B3,
    #[serde(rename = "4")]
    B4,
    /// Degree 3, `m = (k/r)(p^4 - 6p^3 + 12p^2 - 9p + 3)/(p - 1)^3` with the
    /// branch-1 coordinates.
    RationalM,
    /// Same radicand with coordinates `(1, -kr, r)`. Printed as a solution
    /// but not a unit.
    RationalMCompanion,
    /// Degree 3, branch 1 reparametrized by `r = 3k / (k^3 - m)`.
    SearchMinus,
    /// Degree 3, `r = 3k / (k^3 + m)`: branch 1 gives a unit over `-m`,
    /// reflected to `(s_0, -s_1, s_2)` over `m`.
    SearchPlus,
    /// Geometric coordinates `m^(n-1-i)` over `m^n - 1`.
    GeometricMinus,
    /// Geometric coordinates over `m^n + 1`, odd n, norm +1.
    GeometricPlusOdd,
    /// Geometric coordinates over `m^n + 1`, even n, norm -1.
    GeometricPlusEven,
}

impl Branch {
    pub const NUMBERED: [Branch; 4] = [Branch::B1, Branch::B2, Branch::B3, Branch::B4];
    pub const CUBIC_EXTRAS: [Branch; 4] = [
        Branch::RationalM,
        Branch::RationalMCompanion,
        Branch::SearchMinus,
        Branch::SearchPlus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Branch::B1 => "1",
            Branch::B2 => "2",
            Branch::B3 => "3",
            Branch::B4 => "4",
            Branch::RationalM => "rational-m",
            Branch::RationalMCompanion => "rational-m-companion",
            Branch::SearchMinus => "search-minus",
            Branch::SearchPlus => "search-plus",
            Branch::GeometricMinus => "geometric-minus",
            Branch::GeometricPlusOdd => "geometric-plus-odd",
            Branch::GeometricPlusEven => "geometric-plus-even",
        }
    }

    /// The branch of the same degree whose forms are the inverses of this
    /// one's.
    pub fn partner(self, degree: u32) -> Option<Branch> {
        match (degree, self) {
            (3, Branch::B1) => Some(Branch::B3),
            (3, Branch::B3) => Some(Branch::B1),
            (3, Branch::B2) => Some(Branch::B4),
            (3, Branch::B4) => Some(Branch::B2),
            (_, Branch::B1) => Some(Branch::B2),
            (_, Branch::B2) => Some(Branch::B1),
            (_, Branch::B3) => Some(Branch::B4),
            (_, Branch::B4) => Some(Branch::B3),
            _ => None,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Branch::B1,
            Branch::B2,
            Branch::B3,
            Branch::B4,
            Branch::RationalM,
            Branch::RationalMCompanion,
            Branch::SearchMinus,
            Branch::SearchPlus,
            Branch::GeometricMinus,
            Branch::GeometricPlusOdd,
            Branch::GeometricPlusEven,
        ];
        all.into_iter()
            .find(|b| b.label() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown branch {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyId {
    pub degree: u32,
    pub branch: Branch,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {} branch {}", self.degree, self.branch)
    }
}

/// How the degree-9 branches 2 and 4 are read. Their printed coordinates use
/// the radicand `m` where the other degrees use the parameter `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reading {
    Printed,
    RSubstituted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Params {
    Kr {
        #[serde(with = "bigint_text")]
        k: BigInt,
        #[serde(with = "bigint_text")]
        r: BigInt,
    },
    Base {
        #[serde(with = "bigint_text")]
        base: BigInt,
    },
}

mod bigint_text {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Failed {
        #[serde(with = "crate::bigmath::rational_serde")]
        norm: Rational,
    },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellSolution {
    pub family: FamilyId,
    pub params: Params,
    pub form: NmForm,
    pub expected_norm: i32,
    /// Radicand is zero or a perfect n-th power, so the forms do not make a
    /// degree-n field.
    pub degenerate: bool,
    pub verdict: Option<Verdict>,
}

impl PellSolution {
    fn new(family: FamilyId, params: Params, form: NmForm, expected_norm: i32) -> Self {
        let degenerate = is_degenerate_radicand(form.radicand(), form.degree() as u32);
        Self {
            family,
            params,
            form,
            expected_norm,
            degenerate,
            verdict: None,
        }
    }

    pub fn m(&self) -> &Rational {
        self.form.radicand()
    }

    pub fn coords(&self) -> &[Rational] {
        self.form.coords()
    }

    /// A copy with the verdict filled in.
    pub fn verified(mut self) -> Self {
        self.verdict = Some(verify(&self));
        self
    }
}

/// Zero, or a rational whose numerator and denominator are both exact n-th
/// powers (up to sign for odd n).
pub fn is_degenerate_radicand(m: &Rational, n: u32) -> bool {
    if m.is_zero() {
        return true;
    }
    if n <= 1 {
        return false;
    }
    if m.is_negative() && n.is_multiple_of(2) {
        return false;
    }
    let perfect = |v: &BigInt| {
        let a = v.abs();
        num_traits::pow(a.nth_root(n), n as usize) == a
    };
    perfect(m.numer()) && perfect(m.denom())
}

/// Exact determinant check against the expected norm.
pub fn verify(sol: &PellSolution) -> Verdict {
    let norm = sol.form.norm();
    if norm == int(sol.expected_norm.into()) {
        Verdict::Verified
    } else {
        Verdict::Failed { norm }
    }
}

// Coefficient tables, leading coefficient first, unsigned.
const MONOMIAL_5: [i64; 5] = [1, 1, 2, 2, 1];
const MONOMIAL_7: [i64; 7] = [1, 1, 3, 5, 5, 3, 1];
const MONOMIAL_9: [i64; 9] = [1, 1, 1, 1, 2, 2, 1, 1, 1];
const MONOMIAL_11: [i64; 11] = [1, 1, 5, 15, 30, 42, 42, 30, 15, 5, 1];

const INVERSE_5: &[&[i64]] = &[
    &[1, 10, 30, 25, 1],
    &[1, 9, 23, 14],
    &[1, 8, 17, 7],
    &[1, 7, 12, 3],
    &[1, 6, 8, 1],
];

const INVERSE_7: &[&[i64]] = &[
    &[1, 21, 161, 539, 721, 245, 1],
    &[1, 20, 144, 442, 516, 132],
    &[1, 19, 128, 358, 360, 66],
    &[1, 18, 113, 286, 244, 30],
    &[1, 17, 99, 225, 160, 12],
    &[1, 16, 86, 174, 101, 4],
    &[1, 15, 74, 132, 61, 1],
];

const INVERSE_9: &[&[i64]] = &[
    &[9, 54, 97, 48, 1],
    &[9, 51, 84, 35],
    &[9, 48, 72, 25],
    &[9, 45, 61, 17],
    &[9, 42, 51, 11],
    &[9, 39, 42, 7],
    &[9, 36, 34, 4],
    &[9, 33, 27, 2],
    &[9, 30, 21, 1],
];

const INVERSE_11: &[&[i64]] = &[
    &[
        1, 55, 1265, 15730, 114037, 483637, 1137015, 1295910, 527329, 32065, 1,
    ],
    &[
        1, 54, 1216, 14749, 103758, 423776, 947934, 1005966, 363493, 16796,
    ],
    &[
        1, 53, 1168, 13811, 94212, 370171, 786526, 774787, 246779, 8398,
    ],
    &[
        1, 52, 1121, 12915, 85362, 322301, 649346, 591812, 164814, 3978,
    ],
    &[
        1, 51, 1075, 12060, 77172, 279676, 533294, 448110, 108134, 1768,
    ],
    &[
        1, 50, 1030, 11245, 69607, 241836, 435590, 336175, 69589, 728,
    ],
    &[1, 49, 986, 10469, 62633, 208350, 353750, 249740, 43849, 273],
    &[1, 48, 943, 9731, 56217, 178815, 285563, 183609, 26998, 91],
    &[1, 47, 901, 9030, 50327, 152855, 229069, 133506, 16204, 26],
    &[1, 46, 860, 8365, 44932, 130120, 182538, 95940, 9454, 6],
    &[1, 45, 820, 7735, 40002, 110285, 144450, 68085, 5344, 1],
];

/// The constant `c` in `m = (k/r)(r k^(n-1) ∓ c)`.
fn radicand_offset(degree: u32) -> i64 {
    if degree == 9 {
        3
    } else {
        degree as i64
    }
}

fn monomial_table(degree: u32) -> Option<&'static [i64]> {
    match degree {
        5 => Some(&MONOMIAL_5),
        7 => Some(&MONOMIAL_7),
        9 => Some(&MONOMIAL_9),
        11 => Some(&MONOMIAL_11),
        _ => None,
    }
}

fn inverse_table(degree: u32) -> Option<&'static [&'static [i64]]> {
    match degree {
        5 => Some(INVERSE_5),
        7 => Some(INVERSE_7),
        9 => Some(INVERSE_9),
        11 => Some(INVERSE_11),
        _ => None,
    }
}

/// Signed coefficients (leading first) of the bracketed polynomial of
/// coordinate `index` in branch 2 or 4 of degree 5, 7, 9 or 11.
pub fn bracket_polynomial(degree: u32, branch: Branch, index: usize) -> Result<Vec<BigInt>> {
    let table = inverse_table(degree).ok_or_else(|| undefined(degree, branch))?;
    let alternate = match branch {
        Branch::B2 => true,
        Branch::B4 => false,
        _ => return Err(undefined(degree, branch)),
    };
    let row = table
        .get(index)
        .ok_or_else(|| Error::IndexOutOfRange(format!("coordinate {index} of degree {degree}")))?;
    Ok(row
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if alternate && i % 2 == 1 {
                BigInt::from(-c)
            } else {
                BigInt::from(c)
            }
        })
        .collect())
}

fn horner(coeffs: &[BigInt], t: &Rational) -> Rational {
    coeffs
        .iter()
        .fold(Rational::zero(), |acc, c| acc * t + big(c.clone()))
}

fn undefined(degree: u32, branch: Branch) -> Error {
    Error::UndefinedFamily(format!("degree {degree} has no branch {branch}"))
}

fn check_params(k: &BigInt, r: &BigInt) -> Result<()> {
    if k < &BigInt::one() || r < &BigInt::one() {
        return Err(Error::InvalidParameter(format!(
            "k and r must be positive (got {k}, {r})"
        )));
    }
    Ok(())
}

/// Instantiates a printed family at `(k, r)`; no verification.
pub fn family(
    degree: u32,
    branch: Branch,
    k: impl Into<BigInt>,
    r: impl Into<BigInt>,
) -> Result<PellSolution> {
    family_with_reading(degree, branch, k, r, Reading::Printed)
}

/// [`family`] with an explicit reading of the degree-9 branches 2 and 4;
/// other families ignore `reading`.
pub fn family_with_reading(
    degree: u32,
    branch: Branch,
    k: impl Into<BigInt>,
    r: impl Into<BigInt>,
    reading: Reading,
) -> Result<PellSolution> {
    let (k, r) = (k.into(), r.into());
    check_params(&k, &r)?;
    let (m, coords) = if degree == 3 {
        cubic_family(branch, &k, &r)?
    } else {
        general_family(degree, branch, &k, &r, reading)?
    };
    Ok(PellSolution::new(
        FamilyId { degree, branch },
        Params::Kr { k, r },
        NmForm::new(m, coords)?,
        1,
    ))
}

fn cubic_family(branch: Branch, k: &BigInt, r: &BigInt) -> Result<(Rational, Vec<Rational>)> {
    let kq = big(k.clone());
    let rq = big(r.clone());
    let p = &kq * &kq * &rq;
    let ratio = &kq / &rq;
    let one = Rational::one();
    let two = int(2);
    let three = int(3);
    // branch-1 coordinates, shared by several branches
    let minus_coords = || {
        vec![
            (&p - &two) * (&p - &one) - &one,
            &kq * &rq * (&p - &two),
            &rq * (&p - &one),
        ]
    };
    Ok(match branch {
        Branch::B1 | Branch::SearchMinus => (&ratio * (&p - &three), minus_coords()),
        Branch::B2 => (
            &ratio * (&p + &three),
            vec![
                (&p + &two) * (&p + &one) - &one,
                &kq * &rq * (&p + &two),
                &rq * (&p + &one),
            ],
        ),
        Branch::B3 => (&ratio * (&p - &three), vec![one, -(&rq * &kq), rq]),
        Branch::B4 => (&ratio * (&p + &three), vec![one, &rq * &kq, -rq]),
        Branch::RationalM | Branch::RationalMCompanion => {
            let d = &p - &one;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let num =
                pow(&p, 4) - int(6) * pow(&p, 3) + int(12) * pow(&p, 2) - int(9) * &p + &three;
            let m = &ratio * num / pow(&d, 3);
            if branch == Branch::RationalM {
                (m, minus_coords())
            } else {
                (m, vec![one, -(&kq * &rq), rq])
            }
        }
        Branch::SearchPlus => {
            let mut c = minus_coords();
            c[1] = -c[1].clone();
            (-(&ratio * (&p - &three)), c)
        }
        _ => return Err(undefined(3, branch)),
    })
}

fn general_family(
    degree: u32,
    branch: Branch,
    k: &BigInt,
    r: &BigInt,
    reading: Reading,
) -> Result<(Rational, Vec<Rational>)> {
    let monomial = monomial_table(degree).ok_or_else(|| undefined(degree, branch))?;
    let n = degree as usize;
    let kq = big(k.clone());
    let rq = big(r.clone());
    let minus = match branch {
        Branch::B1 | Branch::B2 => true,
        Branch::B3 | Branch::B4 => false,
        _ => return Err(undefined(degree, branch)),
    };
    let offset = int(radicand_offset(degree));
    let t = &rq * pow(&kq, degree - 1);
    let m = (&kq / &rq) * if minus { &t - &offset } else { &t + &offset };

    let coords = match branch {
        Branch::B1 | Branch::B3 => {
            let mut c = vec![Rational::one()];
            for (i, &mag) in monomial.iter().enumerate().skip(1) {
                let v = int(mag) * &rq * pow(&kq, (n - 1 - i) as u32);
                // branch 1 alternates starting with a minus at s_1
                let negative = (i % 2 == 1) == minus;
                c.push(if negative { -v } else { v });
            }
            c
        }
        _ => {
            // degree 9 prints its inverse branches in the radicand
            let scale = if degree == 9 && reading == Reading::Printed {
                m.clone()
            } else {
                rq.clone()
            };
            let u = &scale * pow(&kq, degree - 1);
            let mut c = Vec::with_capacity(n);
            for i in 0..n {
                let poly = horner(&bracket_polynomial(degree, branch, i)?, &u);
                c.push(if i == 0 {
                    poly
                } else {
                    &scale * pow(&kq, (n - 1 - i) as u32) * poly
                });
            }
            c
        }
    };
    Ok((m, coords))
}

/// Families printed for a degree, in report order.
pub fn branches(degree: u32) -> Vec<Branch> {
    let mut b = Branch::NUMBERED.to_vec();
    if degree == 3 {
        b.extend(Branch::CUBIC_EXTRAS);
    }
    b
}

pub const DEGREES: [u32; 5] = [3, 5, 7, 9, 11];

/// Families whose printed formulas are known not to give units: the
/// degree-9 branches 2 and 4 as printed, and the rational-m companion.
pub fn is_known_erratum(degree: u32, branch: Branch) -> bool {
    matches!(
        (degree, branch),
        (9, Branch::B2) | (9, Branch::B4) | (3, Branch::RationalMCompanion)
    )
}

/// True iff the two branches' forms at `(k, r)` multiply to the identity.
pub fn conjugate_pair_check(
    degree: u32,
    a: Branch,
    b: Branch,
    k: u64,
    r: u64,
    reading: Reading,
) -> Result<bool> {
    let x = family_with_reading(degree, a, k, r, reading)?;
    let y = family_with_reading(degree, b, k, r, reading)?;
    if x.m() != y.m() {
        return Ok(false);
    }
    Ok(x.form.multiply(&y.form)?.is_identity())
}

/// The printed conjugate pairs of a degree.
pub fn conjugate_pairs(degree: u32) -> Vec<(Branch, Branch)> {
    if degree == 3 {
        vec![(Branch::B1, Branch::B3), (Branch::B2, Branch::B4)]
    } else {
        vec![(Branch::B1, Branch::B2), (Branch::B3, Branch::B4)]
    }
}

/// Looks for `k <= k_bound` making `3k / (k^3 ∓ m)` a positive integer `r`
/// and returns the first resulting unit that verifies over radicand `m`.
pub fn find_cubic_unit(m: u64, k_bound: u64) -> Result<Option<PellSolution>> {
    if m < 2 || k_bound < 1 {
        return Err(Error::InvalidParameter(format!(
            "need m >= 2 and k_bound >= 1 (got {m}, {k_bound})"
        )));
    }
    let target = int(m as i64);
    let mb = BigInt::from(m);
    for k in 1..=k_bound {
        let kb = BigInt::from(k);
        let cube = &kb * &kb * &kb;
        let three_k = BigInt::from(3u32) * &kb;
        for (branch, d) in [
            (Branch::SearchMinus, &cube - &mb),
            (Branch::SearchPlus, &cube + &mb),
        ] {
            if d <= BigInt::zero() || !three_k.is_multiple_of(&d) {
                continue;
            }
            let r = &three_k / &d;
            let sol = family(3, branch, kb.clone(), r)?;
            debug_assert_eq!(sol.m(), &target);
            let sol = sol.verified();
            if sol.verdict.as_ref().is_some_and(Verdict::is_verified) {
                return Ok(Some(sol));
            }
        }
    }
    Ok(None)
}

/// Geometric-coordinate solutions `s_i = m^(n-1-i)` of degree `n`.
pub fn f1_solution(n: u32, m: u64, branch: Branch) -> Result<PellSolution> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter(
            "degree and base must be positive".into(),
        ));
    }
    let (sign, expected) = match branch {
        Branch::GeometricMinus => (-1, 1),
        Branch::GeometricPlusOdd if n % 2 == 1 => (1, 1),
        Branch::GeometricPlusEven if n.is_multiple_of(2) => (1, -1),
        Branch::GeometricPlusOdd | Branch::GeometricPlusEven => {
            return Err(Error::InvalidParameter(format!(
                "{branch} does not apply to degree {n}"
            )))
        }
        _ => {
            return Err(Error::UndefinedFamily(format!(
                "{branch} is not a geometric solution"
            )))
        }
    };
    let base = int(m as i64);
    let radicand = pow(&base, n) + int(sign);
    let coords = (0..n).map(|i| pow(&base, n - 1 - i)).collect();
    Ok(PellSolution::new(
        FamilyId { degree: n, branch },
        Params::Base {
            base: BigInt::from(m),
        },
        NmForm::new(radicand, coords)?,
        expected,
    ))
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellRecord {
    pub degree: u32,
    pub branch: Branch,
    pub k: u64,
    pub r: u64,
    /// `None` when the family is undefined at this point.
    pub m: Option<String>,
    pub coords: Option<Vec<String>>,
    pub norm: Option<String>,
    pub verdict: String,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PellRecord {
    pub fn is_verified(&self) -> bool {
        self.verdict == "verified"
    }

    pub fn is_undefined(&self) -> bool {
        self.verdict == "undefined"
    }
}

/// Instantiates and verifies one family point.
pub fn record(degree: u32, branch: Branch, k: u64, r: u64, reading: Reading) -> PellRecord {
    match family_with_reading(degree, branch, k, r, reading) {
        Ok(sol) => {
            let norm = sol.form.norm();
            let ok = norm.is_one();
            PellRecord {
                degree,
                branch,
                k,
                r,
                m: Some(rational_text(sol.m())),
                coords: Some(sol.coords().iter().map(rational_text).collect()),
                norm: Some(rational_text(&norm)),
                verdict: if ok { "verified" } else { "failed" }.into(),
                degenerate: sol.degenerate,
                note: (!ok && is_known_erratum(degree, branch))
                    .then(|| "known erratum in printed formula".into()),
            }
        }
        Err(e) => PellRecord {
            degree,
            branch,
            k,
            r,
            m: None,
            coords: None,
            norm: None,
            verdict: "undefined".into(),
            degenerate: false,
            note: Some(e.to_string()),
        },
    }
}

/// Verifies every `(branch, k, r)` with `k <= kmax`, `r <= rmax`, in
/// parallel; the records come back in `(branch, k, r)` order.
pub fn verify_grid(
    degree: u32,
    branches: &[Branch],
    kmax: u64,
    rmax: u64,
    reading: Reading,
) -> Vec<PellRecord> {
    let points: Vec<(Branch, u64, u64)> = branches
        .iter()
        .flat_map(|&b| (1..=kmax).flat_map(move |k| (1..=rmax).map(move |r| (b, k, r))))
        .collect();
    points
        .into_par_iter()
        .map(|(b, k, r)| record(degree, b, k, r, reading))
        .collect()
}

/// The three readings of a degree-9 inverse branch at one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadingVerdicts {
    pub branch: Branch,
    pub k: u64,
    pub r: u64,
    pub printed: Verdict,
    pub r_substituted: Verdict,
    /// Verdict for the exact inverse of the partner branch.
    pub inverse_of_partner: Verdict,
    pub r_substituted_equals_inverse: bool,
}

pub fn degree9_readings(branch: Branch, k: u64, r: u64) -> Result<ReadingVerdicts> {
    if !matches!(branch, Branch::B2 | Branch::B4) {
        return Err(Error::InvalidParameter(
            "only branches 2 and 4 have alternative readings".into(),
        ));
    }
    let printed = verify(&family_with_reading(9, branch, k, r, Reading::Printed)?);
    let substituted = family_with_reading(9, branch, k, r, Reading::RSubstituted)?;
    let partner = family(9, branch.partner(9).expect("numbered branch"), k, r)?;
    let inverse = partner.form.inverse()?;
    let inverse_verdict = if inverse.norm().is_one() {
        Verdict::Verified
    } else {
        Verdict::Failed {
            norm: inverse.norm(),
        }
    };
    Ok(ReadingVerdicts {
        branch,
        k,
        r,
        printed,
        r_substituted: verify(&substituted),
        inverse_of_partner: inverse_verdict,
        r_substituted_equals_inverse: substituted.form == inverse,
    })
}

/// Coordinates of `inverse(partner)` recovered as polynomials in
/// `t = r k^(n-1)`: `s_0 = P_0(t)` and `s_i = r k^(n-1-i) P_i(t)`. Returns
/// the `P_i` with rational coefficients, leading coefficient first.
pub fn suggest_fix(degree: u32, branch: Branch) -> Result<Vec<Vec<Rational>>> {
    let partner = branch
        .partner(degree)
        .filter(|_| degree != 3)
        .ok_or_else(|| undefined(degree, branch))?;
    let n = degree as usize;
    let samples = n + 2;
    // k = 1, so t = r
    let mut values: Vec<Vec<(Rational, Rational)>> = vec![Vec::with_capacity(samples); n];
    for r in 1..=samples as u64 {
        let inv = family(degree, partner, 1u32, r)?.form.inverse()?;
        let t = int(r as i64);
        for (i, s) in inv.coords().iter().enumerate() {
            let v = if i == 0 { s.clone() } else { s / &t };
            values[i].push((t.clone(), v));
        }
    }
    let polys: Vec<Vec<Rational>> = values.iter().map(|pts| interpolate(pts)).collect();

    // validate away from the sample points, with k > 1
    for (k, r) in [(2u64, 1u64), (2, 3), (3, 2)] {
        let inv = family(degree, partner, k, r)?.form.inverse()?;
        let kq = int(k as i64);
        let rq = int(r as i64);
        let t = &rq * pow(&kq, degree - 1);
        for (i, poly) in polys.iter().enumerate() {
            let base = poly.iter().fold(Rational::zero(), |acc, c| acc * &t + c);
            let expect = if i == 0 {
                base
            } else {
                &rq * pow(&kq, (n - 1 - i) as u32) * base
            };
            if inv.coords()[i] != expect {
                return Err(Error::UndefinedFamily(format!(
                    "inverse of degree {degree} branch {partner} is not polynomial in r k^{}",
                    degree - 1
                )));
            }
        }
    }
    Ok(polys)
}

/// Newton interpolation through `(x, y)` pairs; coefficients leading first,
/// with leading zeros trimmed.
fn interpolate(points: &[(Rational, Rational)]) -> Vec<Rational> {
    let n = points.len();
    let xs: Vec<&Rational> = points.iter().map(|p| &p.0).collect();
    let mut dd: Vec<Rational> = points.iter().map(|p| p.1.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // expand the Newton form, low order first
    let mut coeffs = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Rational::zero(); n];
        for j in 0..n - 1 {
            next[j + 1] += &coeffs[j];
            next[j] -= &coeffs[j] * xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs.reverse();
    coeffs
}

/// Renders a polynomial in `var`, leading coefficient first.
pub fn polynomial_text(coeffs: &[Rational], var: &str) -> String {
    let deg = coeffs.len().saturating_sub(1);
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = deg - i;
        let mag = c.abs();
        let body = match e {
            0 => rational_text(&mag),
            _ => {
                let coeff = if mag.is_one() {
                    String::new()
                } else {
                    rational_text(&mag)
                };
                if e == 1 {
                    format!("{coeff}{var}")
                } else {
                    format!("{coeff}{var}^{e}")
                }
            }
        };
        match (out.is_empty(), c.is_negative()) {
            (true, true) => out.push_str(&format!("-{body}")),
            (true, false) => out.push_str(&body),
            (false, true) => out.push_str(&format!(" - {body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Rows of the number triangle, keyed by `n` where the degree is `2n - 1`.
pub struct NumberTriangle;

impl NumberTriangle {
    pub const ROWS: [&'static [i64]; 5] = [
        &[1],
        &[1, 2],
        &[1, 3, 5],
        &[1, 1, 1, 2],
        &[1, 5, 15, 30, 42],
    ];

    pub fn row(n: u32) -> Option<&'static [i64]> {
        (2..=6).contains(&n).then(|| Self::ROWS[(n - 2) as usize])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleReport {
    pub degree: u32,
    pub row: Vec<i64>,
    /// `|s_i| / (r k^(n-1-i))` for `i = 1..n-1` of the monomial branch.
    pub observed: Vec<String>,
    pub matches: bool,
}

/// Compares the coefficient moduli of the monomial unit of a degree with the
/// matching triangle row followed by its reverse.
pub fn triangle_check(degree: u32) -> Result<TriangleReport> {
    if !DEGREES.contains(&degree) {
        return Err(Error::UndefinedFamily(format!(
            "no families in degree {degree}"
        )));
    }
    let row = NumberTriangle::row(degree.div_ceil(2)).expect("degree in range");
    let branch = if degree == 3 { Branch::B3 } else { Branch::B1 };
    let (k, r) = (2u64, 3u64);
    let sol = family(degree, branch, k, r)?;
    let n = degree as usize;
    let observed: Vec<Rational> = (1..n)
        .map(|i| sol.coords()[i].abs() / (int(r as i64) * pow(&int(k as i64), (n - 1 - i) as u32)))
        .collect();
    let expected: Vec<Rational> = row
        .iter()
        .chain(row.iter().rev())
        .map(|&v| int(v))
        .collect();
    Ok(TriangleReport {
        degree,
        row: row.to_vec(),
        matches: observed == expected,
        observed: observed.iter().map(rational_text).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeTermReport {
    /// `(i, |free term|)` of the bracketed polynomials of `s_6..s_10`.
    pub free_terms: Vec<(usize, i64)>,
    pub relations: Vec<FreeTermRelation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeTermRelation {
    pub order: u32,
    pub value: i64,
    pub expected: i64,
    pub holds: bool,
}

impl FreeTermReport {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|r| r.holds)
    }
}

/// Binomial differences of the degree-11 branch-2 free terms:
/// `sum_i (-1)^i C(j,i) s_(10-j+i)` for `j = 0..4`, expected to give the
/// last triangle row.
pub fn free_term_relations_check() -> Result<FreeTermReport> {
    let mut terms = Vec::new();
    let mut by_index = [0i64; 11];
    for (i, slot) in by_index.iter_mut().enumerate().skip(6) {
        let poly = bracket_polynomial(11, Branch::B2, i)?;
        let free = poly
            .last()
            .expect("non-empty")
            .abs()
            .to_i64()
            .expect("small");
        *slot = free;
        terms.push((i, free));
    }
    let expected = NumberTriangle::row(6).expect("row 6");
    let relations = (0..5u32)
        .map(|j| {
            let value: i64 = (0..=j)
                .map(|i| {
                    let c = binomial(j, i).to_i64().expect("small");
                    let s = by_index[(10 - j + i) as usize];
                    if i % 2 == 0 {
                        c * s
                    } else {
                        -c * s
                    }
                })
                .sum();
            FreeTermRelation {
                order: j,
                value,
                expected: expected[j as usize],
                holds: value == expected[j as usize],
            }
        })
        .collect();
    Ok(FreeTermReport {
        free_terms: terms,
        relations,
    })
}

/// Digit blocks of the large cubic example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GigFixture {
    pub blocks: BTreeMap<String, String>,
}

impl GigFixture {
    /// Labeled blocks `label:` followed by digits; whitespace inside a block
    /// is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut blocks: BTreeMap<String, String> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let body = match line.split_once(':') {
                Some((label, rest)) => {
                    let label = label.trim().to_string();
                    if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric()) {
                        return Err(Error::MalformedFixture(format!(
                            "line {}: bad label {label:?}",
                            lineno + 1
                        )));
                    }
                    if blocks.contains_key(&label) {
                        return Err(Error::MalformedFixture(format!(
                            "line {}: duplicate block {label}",
                            lineno + 1
                        )));
                    }
                    blocks.insert(label.clone(), String::new());
                    current = Some(label);
                    rest
                }
                None => line,
            };
            let label = current.as_ref().ok_or_else(|| {
                Error::MalformedFixture(format!("line {}: digits before any label", lineno + 1))
            })?;
            for c in body.chars().filter(|c| !c.is_whitespace()) {
                if !c.is_ascii_digit() {
                    return Err(Error::MalformedFixture(format!(
                        "line {}: unexpected {c:?}",
                        lineno + 1
                    )));
                }
                blocks.get_mut(label).expect("inserted").push(c);
            }
        }
        for label in ["k", "m", "s0", "s1", "s2"] {
            match blocks.get(label) {
                None => return Err(Error::MalformedFixture(format!("missing block {label}"))),
                Some(d) if d.is_empty() => {
                    return Err(Error::MalformedFixture(format!("empty block {label}")))
                }
                _ => {}
            }
        }
        Ok(Self { blocks })
    }

    pub fn k(&self) -> BigInt {
        self.blocks["k"].parse().expect("validated digits")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCheck {
    pub label: String,
    pub fixture_digits: usize,
    pub computed_digits: usize,
    /// 1-based position of the first differing digit.
    pub first_mismatch: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GigReport {
    pub k_digits: usize,
    pub blocks: Vec<BlockCheck>,
    #[serde(with = "crate::bigmath::rational_serde")]
    pub norm: Rational,
}

impl GigReport {
    pub fn verified(&self) -> bool {
        self.norm.is_one() && self.blocks.iter().all(|b| b.first_mismatch.is_none())
    }
}

/// Recomputes `m, s_0, s_1, s_2` from `k` through degree-3 branch 2 with
/// `r = k`, compares them with the fixture digits and evaluates the cubic
/// norm.
pub fn gig_verify(fixture: &GigFixture) -> Result<GigReport> {
    let k = fixture.k();
    let sol = family(3, Branch::B2, k.clone(), k)?;
    let c = sol.coords();
    let norm = norm3_closed(&c[0], &c[1], &c[2], sol.m());
    let computed = [("m", sol.m()), ("s0", &c[0]), ("s1", &c[1]), ("s2", &c[2])];
    let blocks = computed
        .iter()
        .map(|(label, v)| {
            let got = rational_text(v);
            let want = &fixture.blocks[*label];
            let first_mismatch = if &got == want {
                None
            } else {
                Some(
                    got.bytes()
                        .zip(want.bytes())
                        .position(|(a, b)| a != b)
                        .unwrap_or(got.len().min(want.len()))
                        + 1,
                )
            };
            BlockCheck {
                label: label.to_string(),
                fixture_digits: want.len(),
                computed_digits: got.len(),
                first_mismatch,
            }
        })
        .collect();
    Ok(GigReport {
        k_digits: fixture.blocks["k"].len(),
        blocks,
        norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigmath::frac;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn cubic_closed_norm() {
        assert_eq!(norm3_closed(&int(1), &int(0), &int(0), &int(17)), int(1));
        assert_eq!(norm3_closed(&int(5), &int(3), &int(2), &int(4)), int(1));
        let x = NmForm::new(frac(-5, 3), vec![frac(1, 2), int(-3), frac(7, 4)]).unwrap();
        let c = x.coords();
        assert_eq!(norm3_closed(&c[0], &c[1], &c[2], x.radicand()), x.norm());
    }

    #[test]
    fn quintic_closed_norm() {
        let one: [Rational; 5] = [int(1), int(0), int(0), int(0), int(0)];
        assert_eq!(norm5_closed(&one, &int(9)), int(1));
        let s: [Rational; 5] = [int(1), int(-1), int(2), int(-2), int(1)];
        assert_eq!(norm5_closed(&s, &int(-4)), int(1));
        let s: [Rational; 5] = [int(3), frac(-1, 2), int(4), int(0), int(-7)];
        let x = NmForm::new(frac(5, 3), s.to_vec()).unwrap();
        assert_eq!(norm5_closed(&s, &frac(5, 3)), x.norm());
    }

    #[test]
    fn cubic_family_instances() {
        let s = family(3, Branch::B2, 1u32, 1u32).unwrap();
        assert_eq!((s.m(), s.coords()), (&int(4), ints(&[5, 3, 2]).as_slice()));
        let s = family(3, Branch::B1, 1u32, 1u32).unwrap();
        assert_eq!(
            (s.m(), s.coords()),
            (&int(-2), ints(&[-1, -1, 0]).as_slice())
        );
        assert_eq!(
            family(3, Branch::RationalM, 1u32, 1u32).unwrap_err(),
            Error::DivisionByZero
        );
        assert!(matches!(
            family(3, Branch::B1, 0u32, 1u32),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            family(5, Branch::RationalM, 1u32, 1u32),
            Err(Error::UndefinedFamily(_))
        ));
        assert!(matches!(
            family(4, Branch::B1, 1u32, 1u32),
            Err(Error::UndefinedFamily(_))
        ));
    }

    #[test]
    fn quintic_family_instances() {
        let s = family(5, Branch::B1, 1u32, 1u32).unwrap();
        assert_eq!(
            (s.m(), s.coords()),
            (&int(-4), ints(&[1, -1, 2, -2, 1]).as_slice())
        );
        let s = family(5, Branch::B2, 1u32, 1u32).unwrap();
        assert_eq!(s.coords(), ints(&[-3, 1, 3, 3, 2]).as_slice());
    }

    #[test]
    fn eleventh_degree_moduli() {
        let s = family(11, Branch::B1, 1u32, 1u32).unwrap();
        let moduli: Vec<Rational> = s.coords().iter().map(|c| c.abs()).collect();
        assert_eq!(moduli, ints(&MONOMIAL_11));
    }

    #[test]
    fn small_grid_verifies() {
        for d in [3, 5, 7, 11] {
            for b in branches(d) {
                if is_known_erratum(d, b) {
                    continue;
                }
                for k in 1..=2u64 {
                    for r in 1..=2u64 {
                        let rec = record(d, b, k, r, Reading::Printed);
                        assert!(rec.is_verified() || rec.is_undefined(), "{rec:?}");
                    }
                }
            }
        }
        for b in [Branch::B1, Branch::B3] {
            assert!(record(9, b, 2, 1, Reading::Printed).is_verified());
        }
    }

    #[test]
    fn degree9_readings_disagree() {
        let v = degree9_readings(Branch::B2, 1, 2).unwrap();
        assert!(!v.printed.is_verified());
        assert!(v.r_substituted.is_verified());
        assert!(v.inverse_of_partner.is_verified());
        assert!(v.r_substituted_equals_inverse);
    }

    #[test]
    fn pairs() {
        assert!(conjugate_pair_check(3, Branch::B2, Branch::B4, 1, 1, Reading::Printed).unwrap());
        assert!(conjugate_pair_check(5, Branch::B1, Branch::B2, 1, 1, Reading::Printed).unwrap());
        assert!(!conjugate_pair_check(3, Branch::B1, Branch::B2, 1, 1, Reading::Printed).unwrap());
    }

    #[test]
    fn cubic_search() {
        // 26 = 3^3 - 1
        let s = find_cubic_unit(26, 5).unwrap().unwrap();
        assert_eq!(s.m(), &int(26));
        assert!(s.verdict.unwrap().is_verified());
        let s = find_cubic_unit(2, 5).unwrap().unwrap();
        assert_eq!(s.family.branch, Branch::SearchPlus);
        assert_eq!(find_cubic_unit(1000, 3).unwrap(), None);
        assert!(find_cubic_unit(1, 3).is_err());
    }

    #[test]
    fn degenerate_flags() {
        assert!(is_degenerate_radicand(&int(8), 3));
        assert!(is_degenerate_radicand(&frac(-27, 8), 3));
        assert!(is_degenerate_radicand(&int(0), 5));
        assert!(!is_degenerate_radicand(&int(-4), 2));
        assert!(!is_degenerate_radicand(&int(12), 2));
        let s = f1_solution(3, 1, Branch::GeometricMinus).unwrap();
        assert!(s.degenerate);
    }

    #[test]
    fn geometric_solutions() {
        let s = f1_solution(2, 5, Branch::GeometricMinus).unwrap();
        assert_eq!((s.m(), s.coords()), (&int(24), ints(&[5, 1]).as_slice()));
        assert!(verify(&s).is_verified());
        let s = f1_solution(2, 3, Branch::GeometricPlusEven).unwrap();
        assert_eq!(s.expected_norm, -1);
        assert_eq!(s.form.norm(), int(-1));
        assert!(verify(&s).is_verified());
        let s = f1_solution(3, 2, Branch::GeometricPlusOdd).unwrap();
        assert_eq!(s.coords(), ints(&[4, 2, 1]).as_slice());
        assert!(verify(&s).is_verified());
        assert!(f1_solution(3, 2, Branch::GeometricPlusEven).is_err());
        assert!(f1_solution(3, 2, Branch::B1).is_err());
    }

    #[test]
    fn triangle_and_free_terms() {
        for d in DEGREES {
            assert!(triangle_check(d).unwrap().matches, "degree {d}");
        }
        let report = free_term_relations_check().unwrap();
        assert!(report.all_hold());
        assert_eq!(report.free_terms[0], (6, 273));
        assert_eq!(report.free_terms[3], (9, 6));
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        let pts: Vec<(Rational, Rational)> = (0..6)
            .map(|x| (int(x), int(3 * x * x * x - 2 * x + 7)))
            .collect();
        assert_eq!(interpolate(&pts), ints(&[3, 0, -2, 7]));
        assert_eq!(polynomial_text(&ints(&[3, 0, -2, 7]), "t"), "3t^3 - 2t + 7");
        assert_eq!(polynomial_text(&ints(&[-1, 1]), "t"), "-t + 1");
    }

    #[test]
    fn suggested_fix_matches_tables() {
        let polys = suggest_fix(5, Branch::B2).unwrap();
        for (i, p) in polys.iter().enumerate() {
            let table: Vec<Rational> = bracket_polynomial(5, Branch::B2, i)
                .unwrap()
                .into_iter()
                .map(big)
                .collect();
            assert_eq!(p, &table);
        }
        let polys = suggest_fix(9, Branch::B2).unwrap();
        assert_eq!(polys[0], ints(&[9, -54, 97, -48, 1]));
    }

    #[test]
    fn fixture_parsing() {
        let f = GigFixture::parse("k:\n12\n3\nm: 4\ns0:1\ns1:2\ns2:3\n").unwrap();
        assert_eq!(f.k(), BigInt::from(123));
        assert!(matches!(
            GigFixture::parse("k: 1x\nm:1\ns0:1\ns1:1\ns2:1"),
            Err(Error::MalformedFixture(_))
        ));
        assert!(matches!(
            GigFixture::parse("k: 1\nm:1\ns0:1\ns1:1"),
            Err(Error::MalformedFixture(_))
        ));
        assert!(matches!(
            GigFixture::parse("12\nk: 1"),
            Err(Error::MalformedFixture(_))
        ));
    }

    #[test]
    fn small_gig() {
        // k = 2: m = 11, s = (89, 40, 18)
        let f = GigFixture::parse("k: 2\nm: 11\ns0: 89\ns1: 40\ns2: 19\n").unwrap();
        let rep = gig_verify(&f).unwrap();
        assert!(rep.norm.is_one());
        assert_eq!(rep.blocks[3].first_mismatch, Some(2));
        assert!(!rep.verified());
    }
}
