//! Recurrent fractions of order n.
//!
//! A recurrent fraction is fixed by a coefficient schedule: for every column
//! index `j >= 1` a tuple `(a_1j, ..., a_nj)`. Its m-th rational truncation
//! is `P_m / Q_m` where both sequences obey
//!
//! ```text
//! X_m = a_1m X_(m-1) + a_2m X_(m-2) + ... + a_nm X_(m-n)
//! ```
//!
//! seeded with `P_0 = 1, P_i = 0 (i < 0)` and `Q_(1-n) = 1,
//! Q_i = 0 (2-n <= i <= 0)`, with `a_n1` read as 1 in the `Q` recurrence.
//! The same numbers are the parapermanents of the numerator and denominator
//! triangular matrices (see [`RecurrentFraction::numerator_matrix`]); the
//! recurrence is simply their last-row expansion.
//!
//! The 1-periodic fraction built from `x^n = a_1 x^(n-1) + ... + a_n`
//! converges to the dominant real root of that polynomial whenever such a
//! root exists.

use std::borrow::Cow;
use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bigmath::{
    big, decimal_render, int, pow, pow10, rational_serde, DecimalInterval, Rational,
};
use crate::error::{Error, Result};
use crate::paraperm::TriMatrix;

/// `x^n = a_1 x^(n-1) + a_2 x^(n-2) + ... + a_n` with `a_n != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonicRecurrencePoly {
    coeffs: Vec<Rational>,
}

impl MonicRecurrencePoly {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        match coeffs.last() {
            None => Err(Error::EmptyPolynomial),
            Some(a) if a.is_zero() => Err(Error::ZeroTrailingCoefficient),
            Some(_) => Ok(Self { coeffs }),
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// `x^n = sum_s sign^(s-1) C(n,s) m^(n-s) x^(n-s)`: the polynomial whose
    /// dominant root is the `(n, m^n + sign)` super-form.
    pub fn binomial(n: u32, m: &Rational, sign: i32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("degree must be at least 1".into()));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParameter(format!(
                "sign must be +1 or -1, got {sign}"
            )));
        }
        let mut coeffs = Vec::with_capacity(n as usize);
        let mut binom = BigInt::one();
        for s in 1..=n {
            binom = binom * BigInt::from(n - s + 1) / BigInt::from(s);
            let mut c = big(binom.clone()) * pow(m, n - s);
            if sign < 0 && s % 2 == 0 {
                c = -c;
            }
            coeffs.push(c);
        }
        Self::new(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `x^n - a_1 x^(n-1) - ... - a_n`.
    pub fn residual(&self, x: &Rational) -> Rational {
        // Horner on the monic form
        let mut acc = Rational::one();
        for a in &self.coeffs {
            acc = acc * x - a;
        }
        acc
    }

    /// Derivative of [`Self::residual`] at `x`.
    pub fn derivative(&self, x: &Rational) -> Rational {
        let n = self.order() as i64;
        let mut acc = int(n);
        for (i, a) in self.coeffs.iter().enumerate().take(self.order() - 1) {
            let k = n - 1 - i as i64;
            acc = acc * x - a * int(k);
        }
        acc
    }

    /// Ratio pattern of the 1-periodic fraction: `a_1, a_2/a_1, ..., a_n/a_(n-1)`.
    pub fn ratio_entries(&self) -> Result<Vec<Rational>> {
        let mut out = vec![self.coeffs[0].clone()];
        for i in 1..self.order() {
            if self.coeffs[i - 1].is_zero() {
                return Err(Error::UndefinedRatio { row: i, column: 1 });
            }
            out.push(&self.coeffs[i] / &self.coeffs[i - 1]);
        }
        Ok(out)
    }
}

impl fmt::Display for MonicRecurrencePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order();
        write!(f, "{}", monomial(n))?;
        write!(f, " =")?;
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let e = n - 1 - i;
            let mag = a.abs();
            let coeff = if mag.is_one() && e > 0 {
                String::new()
            } else {
                mag.to_string()
            };
            let sign = match (first, a.is_negative()) {
                (true, true) => " -",
                (true, false) => "",
                (false, true) => " -",
                (false, false) => " +",
            };
            write!(f, "{sign} {coeff}{}", monomial(e))?;
            first = false;
        }
        if first {
            write!(f, " 0")?;
        }
        Ok(())
    }
}

fn monomial(e: usize) -> String {
    match e {
        0 => String::new(),
        1 => "x".into(),
        _ => format!("x^{e}"),
    }
}

/// Generator of schedule columns by 1-based column index.
pub type ColumnFn = Arc<dyn Fn(usize) -> Vec<Rational> + Send + Sync>;

#[derive(Clone)]
pub enum Schedule {
    /// Columns repeat with period `columns.len()`.
    Periodic(Vec<Vec<Rational>>),
    /// Only the listed columns exist.
    Finite(Vec<Vec<Rational>>),
    Generated(ColumnFn),
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Periodic(c) => f.debug_tuple("Periodic").field(c).finish(),
            Schedule::Finite(c) => f.debug_tuple("Finite").field(c).finish(),
            Schedule::Generated(_) => f.write_str("Generated(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RecurrentFraction {
    order: usize,
    schedule: Schedule,
}

/// `P_m / Q_m`; the value is undefined when `Q_m = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub index: usize,
    #[serde(with = "rational_serde")]
    pub p: Rational,
    #[serde(with = "rational_serde")]
    pub q: Rational,
}

impl Truncation {
    pub fn value(&self) -> Option<Rational> {
        (!self.q.is_zero()).then(|| &self.p / &self.q)
    }
}

impl RecurrentFraction {
    fn check_columns(order: usize, columns: &[Vec<Rational>]) -> Result<()> {
        if order == 0 {
            return Err(Error::InvalidParameter("order must be at least 1".into()));
        }
        if let Some(c) = columns.iter().find(|c| c.len() != order) {
            return Err(Error::InvalidParameter(format!(
                "column has {} coefficients, expected {order}",
                c.len()
            )));
        }
        Ok(())
    }

    /// k-periodic fraction with the given `k` columns.
    pub fn periodic(order: usize, columns: Vec<Vec<Rational>>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidParameter("period must be at least 1".into()));
        }
        Self::check_columns(order, &columns)?;
        Ok(Self {
            order,
            schedule: Schedule::Periodic(columns),
        })
    }

    pub fn finite(order: usize, columns: Vec<Vec<Rational>>) -> Result<Self> {
        Self::check_columns(order, &columns)?;
        Ok(Self {
            order,
            schedule: Schedule::Finite(columns),
        })
    }

    pub fn generated(order: usize, f: ColumnFn) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("order must be at least 1".into()));
        }
        Ok(Self {
            order,
            schedule: Schedule::Generated(f),
        })
    }

    /// Order-2 fraction of the continued fraction `q1 + p2/(q2 + p3/(q3 + ...))`.
    /// `p[0]` is unused (it sits in the ignored `a_21` slot).
    pub fn continued_fraction(q: Vec<Rational>, p: Vec<Rational>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::InvalidParameter(
                "q and p must have equal length".into(),
            ));
        }
        let columns = q.into_iter().zip(p).map(|(a, b)| vec![a, b]).collect();
        Self::finite(2, columns)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn period(&self) -> Option<usize> {
        match &self.schedule {
            Schedule::Periodic(c) => Some(c.len()),
            _ => None,
        }
    }

    /// Column `j` (1-based) of the schedule: `(a_1j, ..., a_nj)`.
    pub fn column(&self, j: usize) -> Result<Cow<'_, [Rational]>> {
        if j == 0 {
            return Err(Error::IndexOutOfRange("columns are numbered from 1".into()));
        }
        match &self.schedule {
            Schedule::Periodic(c) => Ok(Cow::Borrowed(&c[(j - 1) % c.len()])),
            Schedule::Finite(c) => c
                .get(j - 1)
                .map(|col| Cow::Borrowed(col.as_slice()))
                .ok_or(Error::ScheduleExhausted(j)),
            Schedule::Generated(f) => {
                let col = f(j);
                if col.len() != self.order {
                    return Err(Error::InvalidParameter(format!(
                        "generated column {j} has {} coefficients, expected {}",
                        col.len(),
                        self.order
                    )));
                }
                Ok(Cow::Owned(col))
            }
        }
    }

    /// Coefficient `a_ij` (both 1-based).
    pub fn coeff(&self, i: usize, j: usize) -> Result<Rational> {
        if i == 0 || i > self.order {
            return Err(Error::IndexOutOfRange(format!(
                "row {i} of an order-{} fraction",
                self.order
            )));
        }
        Ok(self.column(j)?[i - 1].clone())
    }

    /// Ordinary means `a_nn = a_n,n+1 = ... = 1`; checked through column `up_to`.
    pub fn is_ordinary(&self, up_to: usize) -> Result<bool> {
        for j in self.order..=up_to {
            if !self.coeff(self.order, j)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn truncations(&self) -> Truncations<'_> {
        let n = self.order;
        let mut p_hist = VecDeque::from(vec![Rational::zero(); n]);
        p_hist[0] = Rational::one();
        let mut q_hist = VecDeque::from(vec![Rational::zero(); n]);
        q_hist[n - 1] = Rational::one();
        Truncations {
            fraction: self,
            next: 1,
            p_hist,
            q_hist,
        }
    }

    /// The m-th rational truncation (`m >= 1`).
    pub fn truncation(&self, m: usize) -> Result<Truncation> {
        if m == 0 {
            return Err(Error::IndexOutOfRange(
                "truncations are numbered from 1".into(),
            ));
        }
        let mut it = self.truncations();
        let mut last = None;
        for _ in 0..m {
            last = Some(it.step()?);
        }
        Ok(last.expect("m >= 1"))
    }

    /// Numerator triangular matrix of the m-th truncation: row `r` holds
    /// `a_1r` on the diagonal and `a_(d+1),r / a_d,r` at distance `d` below
    /// it, zero once `d >= n`.
    pub fn numerator_matrix(&self, m: usize) -> Result<TriMatrix> {
        if m == 0 {
            return Err(Error::IndexOutOfRange(
                "truncations are numbered from 1".into(),
            ));
        }
        let n = self.order;
        let mut rows = Vec::with_capacity(m);
        for r in 1..=m {
            let col = self.column(r)?;
            let mut row = Vec::with_capacity(r);
            for c in 1..=r {
                let d = r - c;
                let v = if d == 0 {
                    col[0].clone()
                } else if d < n {
                    if col[d - 1].is_zero() {
                        return Err(Error::UndefinedRatio { row: d, column: r });
                    }
                    &col[d] / &col[d - 1]
                } else {
                    Rational::zero()
                };
                row.push(v);
            }
            rows.push(row);
        }
        TriMatrix::new(rows)
    }

    /// Denominator matrix: the numerator with its first column and row
    /// removed (`None` for `m = 1`, whose denominator is the empty matrix).
    pub fn denominator_matrix(&self, m: usize) -> Result<Option<TriMatrix>> {
        let num = self.numerator_matrix(m)?;
        Ok(num.corner(m, 2)?.matrix)
    }

    /// Truncation computed as a ratio of parapermanents instead of by the
    /// recurrence.
    pub fn truncation_by_pper(&self, m: usize) -> Result<Truncation> {
        let p = self.numerator_matrix(m)?.pper();
        let q = self
            .denominator_matrix(m)?
            .map_or_else(Rational::one, |d| d.pper());
        Ok(Truncation { index: m, p, q })
    }

    /// Two fractions are equal when every truncation value agrees. Only the
    /// first `bound` truncations are compared, so `true` is a semi-decision.
    pub fn equal_up_to(&self, other: &RecurrentFraction, bound: usize) -> Result<bool> {
        let mut a = self.truncations();
        let mut b = other.truncations();
        for _ in 0..bound {
            if a.step()?.value() != b.step()?.value() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Streaming truncations; stops when a finite schedule runs out.
pub struct Truncations<'a> {
    fraction: &'a RecurrentFraction,
    next: usize,
    // front is X_(m-1), back is X_(m-n)
    p_hist: VecDeque<Rational>,
    q_hist: VecDeque<Rational>,
}

impl Truncations<'_> {
    pub fn step(&mut self) -> Result<Truncation> {
        let m = self.next;
        let col = self.fraction.column(m)?;
        let n = self.fraction.order;
        let mut p = Rational::zero();
        let mut q = Rational::zero();
        for i in 0..n {
            p += &col[i] * &self.p_hist[i];
            let qi = if m == 1 && i == n - 1 {
                Rational::one()
            } else {
                col[i].clone()
            };
            q += qi * &self.q_hist[i];
        }
        self.p_hist.pop_back();
        self.p_hist.push_front(p.clone());
        self.q_hist.pop_back();
        self.q_hist.push_front(q.clone());
        self.next += 1;
        Ok(Truncation { index: m, p, q })
    }
}

impl Iterator for Truncations<'_> {
    type Item = Truncation;

    fn next(&mut self) -> Option<Truncation> {
        self.step().ok()
    }
}

/// The 1-periodic fraction whose constant column is `(a_1, ..., a_n)`.
pub fn from_polynomial(p: &MonicRecurrencePoly) -> RecurrentFraction {
    RecurrentFraction {
        order: p.order(),
        schedule: Schedule::Periodic(vec![p.coeffs().to_vec()]),
    }
}

/// The 1-periodic fraction converging to the `(n, m^n + 1)` super-form.
pub fn super_fraction(n: u32, m: u32) -> Result<RecurrentFraction> {
    if n < 2 || m < 1 {
        return Err(Error::InvalidParameter(format!(
            "super fraction needs n >= 2, m >= 1 (got {n}, {m})"
        )));
    }
    Ok(from_polynomial(&MonicRecurrencePoly::binomial(
        n,
        &int(m.into()),
        1,
    )?))
}

/// Result of [`dominant_root`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootApprox {
    #[serde(with = "rational_serde")]
    pub value: Rational,
    pub iterations_used: usize,
    /// Decimal places on which the last three truncations agree.
    pub certified_digits: u32,
    /// `|x^n - sum a_i x^(n-i)|` at `value`.
    #[serde(with = "rational_serde")]
    pub residual: Rational,
}

/// Truncations compared by the stopping rule.
pub const AGREEMENT_WINDOW: usize = 3;

/// Approximates the dominant real root of `p` with the truncations of its
/// 1-periodic fraction.
///
/// Stopping rule: the last three consecutive truncations are all defined
/// and each differs from the next by less than `10^-target_digits`. The
/// candidate must then pass a residual test: with `g` the number of decimal
/// digits in the integer part of `|p'(x)|` (at least 1), require
/// `|p(x)| <= n * 10^(g - target_digits)`. Agreement alone can occur while
/// the truncations sit on a non-root, for instance at 0 for `x^2 = -1`.
pub fn dominant_root(
    p: &MonicRecurrencePoly,
    target_digits: u32,
    max_iterations: usize,
) -> Result<RootApprox> {
    let rf = from_polynomial(p);
    let n = p.order();
    let tol = Rational::new(BigInt::one(), pow10(target_digits));
    let mut window: VecDeque<Option<Rational>> = VecDeque::with_capacity(AGREEMENT_WINDOW);
    let mut stalled_off_root = None;
    let mut evidence: VecDeque<String> = VecDeque::new();

    for t in rf.truncations().take(max_iterations) {
        let v = t.value();
        evidence.push_back(match &v {
            Some(x) => format!(
                "m={}: {}",
                t.index,
                decimal_render(x, target_digits.min(40))
            ),
            None => format!("m={}: undefined (Q=0)", t.index),
        });
        if evidence.len() > 6 {
            evidence.pop_front();
        }
        if window.len() == AGREEMENT_WINDOW {
            window.pop_front();
        }
        window.push_back(v);
        if window.len() < AGREEMENT_WINDOW || window.iter().any(Option::is_none) {
            continue;
        }
        let vals: Vec<&Rational> = window.iter().flatten().collect();
        let max_diff = vals
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .max()
            .expect("window has three values");
        if max_diff >= tol {
            continue;
        }
        let x = vals[AGREEMENT_WINDOW - 1].clone();
        let residual = p.residual(&x).abs();
        let guard = integer_digits(&p.derivative(&x).abs()).max(1);
        let bound = int(n as i64) * pow10_signed(guard as i64 - target_digits as i64);
        if residual <= bound {
            return Ok(RootApprox {
                value: x,
                iterations_used: t.index,
                certified_digits: agreement_digits(&max_diff, target_digits),
                residual,
            });
        }
        stalled_off_root = Some(t.index);
    }

    let reason = match stalled_off_root {
        Some(m) => format!(
            "truncations agree near m={m} but the polynomial residual there is not small; \
             the limit is not a root (no dominant real root)"
        ),
        None => "truncations do not stabilise; the polynomial likely has no real root \
                 of strictly largest modulus"
            .to_string(),
    };
    Err(Error::NonConvergence {
        iterations: max_iterations,
        reason,
        evidence: evidence.into(),
    })
}

fn pow10_signed(e: i64) -> Rational {
    if e >= 0 {
        big(pow10(e as u32))
    } else {
        Rational::new(BigInt::one(), pow10((-e) as u32))
    }
}

fn integer_digits(q: &Rational) -> u32 {
    let i = q.to_integer();
    if i.is_zero() {
        0
    } else {
        i.to_str_radix(10).trim_start_matches('-').len() as u32
    }
}

/// Largest `d` with `diff < 10^-d`; an exact agreement reports `fallback`.
fn agreement_digits(diff: &Rational, fallback: u32) -> u32 {
    if diff.is_zero() {
        return fallback;
    }
    let mut d = 0;
    let mut scaled = diff.clone();
    let ten = int(10);
    loop {
        scaled *= &ten;
        if scaled >= Rational::one() {
            return d;
        }
        d += 1;
    }
}

/// Values `u_0..=u_m` of `u_k = a_1 u_(k-1) + ... + a_n u_(k-n)` with
/// `u_0 = 1` and `u_i = 0` for `i < 0`.
pub fn homogeneous_sequence(coeffs: &[Rational], m: usize) -> Vec<Rational> {
    let mut u = Vec::with_capacity(m + 1);
    u.push(Rational::one());
    for k in 1..=m {
        let mut acc = Rational::zero();
        for (i, a) in coeffs.iter().enumerate() {
            if k > i {
                acc += a * &u[k - 1 - i];
            }
        }
        u.push(acc);
    }
    u
}

/// Elementary symmetric polynomials `sigma_0..=sigma_n` of `xs`.
pub fn elementary_symmetric(xs: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); xs.len() + 1];
    e[0] = Rational::one();
    for (k, x) in xs.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            let add = x * &e[j - 1];
            e[j] += add;
        }
    }
    e
}

/// Coefficients `a_i = (-1)^(i-1) sigma_i` of the monic polynomial with the
/// given roots, in the `x^n = a_1 x^(n-1) + ...` convention.
pub fn coefficients_from_roots(xs: &[Rational]) -> Vec<Rational> {
    elementary_symmetric(xs)
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(i, s)| if i % 2 == 1 { s } else { -s })
        .collect()
}

/// Complete homogeneous symmetric polynomial `h_m(xs)` through the linear
/// recurrence with coefficients derived from the elementary symmetric
/// polynomials of `xs`.
pub fn complete_homogeneous(xs: &[Rational], m: usize) -> Rational {
    if xs.is_empty() {
        return if m == 0 {
            Rational::one()
        } else {
            Rational::zero()
        };
    }
    homogeneous_sequence(&coefficients_from_roots(xs), m).swap_remove(m)
}

/// `h_m(xs)` by enumerating every exponent vector with sum `m`.
pub fn complete_homogeneous_brute(xs: &[Rational], m: usize) -> Rational {
    fn rec(xs: &[Rational], rest: usize, acc: Rational, total: &mut Rational) {
        match xs.split_first() {
            None => {
                if rest == 0 {
                    *total += acc;
                }
            }
            Some((x, tail)) if tail.is_empty() => {
                *total += acc * pow(x, rest as u32);
            }
            Some((x, tail)) => {
                let mut p = acc;
                for e in 0..=rest {
                    if e > 0 {
                        p *= x;
                    }
                    rec(tail, rest - e, p.clone(), total);
                }
            }
        }
    }
    let mut total = Rational::zero();
    rec(xs, m, Rational::one(), &mut total);
    total
}

/// `|u_m / u_(m-1) - x_1|` bounded over the enclosure of the dominant root,
/// where `u` is the complete-homogeneous sequence of the roots of `p`
/// (computed through `p`'s coefficients). `roots[0]` must enclose the
/// dominant root; further entries are accepted and ignored, since complex
/// roots cannot be enclosed by a real interval.
pub fn lemma1_limit_check(
    p: &MonicRecurrencePoly,
    roots: &[DecimalInterval],
    m: usize,
) -> Result<Rational> {
    let dominant = roots
        .first()
        .ok_or_else(|| Error::InvalidParameter("need an enclosure of the dominant root".into()))?;
    if roots.len() > p.order() {
        return Err(Error::InvalidParameter(format!(
            "{} roots supplied for a degree-{} polynomial",
            roots.len(),
            p.order()
        )));
    }
    if m == 0 {
        return Err(Error::IndexOutOfRange("m must be at least 1".into()));
    }
    let u = homogeneous_sequence(p.coeffs(), m);
    if u[m - 1].is_zero() {
        return Err(Error::DivisionByZero);
    }
    let ratio = &u[m] / &u[m - 1];
    let a = (&ratio - &dominant.lower).abs();
    let b = (&ratio - &dominant.upper).abs();
    Ok(if a > b { a } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigmath::{frac, nth_root_interval, parse_rational};

    fn example_poly() -> MonicRecurrencePoly {
        MonicRecurrencePoly::from_ints(&[448, 672, 560, 280, 84, 14, 1]).unwrap()
    }

    #[test]
    fn golden_ratio_fifth_truncation() {
        let rf = RecurrentFraction::periodic(2, vec![vec![int(1), int(1)]]).unwrap();
        let t = rf.truncation(5).unwrap();
        assert_eq!(t.value().unwrap(), frac(8, 5));
    }

    #[test]
    fn example_truncations() {
        let rf = from_polynomial(&example_poly());
        assert_eq!(rf.truncation(1).unwrap().value().unwrap(), int(448));
        assert_eq!(rf.truncation(2).unwrap().value().unwrap(), frac(899, 2));
        let nine = rf.truncation(9).unwrap();
        assert_eq!(
            nine.value().unwrap(),
            parse_rational("1666566046544461900687/3707617998461699373").unwrap()
        );
    }

    #[test]
    fn order_one_fraction_is_constant() {
        let p = MonicRecurrencePoly::new(vec![frac(5, 3)]).unwrap();
        let rf = from_polynomial(&p);
        for t in rf.truncations().take(6) {
            assert_eq!(t.value().unwrap(), frac(5, 3));
        }
    }

    #[test]
    fn order_two_is_the_continued_fraction() {
        let rf = from_polynomial(&MonicRecurrencePoly::from_ints(&[1, 1]).unwrap());
        // 1, 2, 3/2, 5/3, 8/5 ...
        let vals: Vec<Rational> = rf
            .truncations()
            .take(5)
            .map(|t| t.value().unwrap())
            .collect();
        assert_eq!(
            vals,
            vec![int(1), int(2), frac(3, 2), frac(5, 3), frac(8, 5)]
        );
    }

    #[test]
    fn general_continued_fraction() {
        // 1 + 2/(3 + 4/5) = 1 + 10/19 = 29/19
        let rf = RecurrentFraction::continued_fraction(
            vec![int(1), int(3), int(5)],
            vec![int(0), int(2), int(4)],
        )
        .unwrap();
        assert_eq!(rf.truncation(3).unwrap().value().unwrap(), frac(29, 19));
        assert_eq!(rf.truncation(4), Err(Error::ScheduleExhausted(4)));
        assert_eq!(rf.truncations().count(), 3);
    }

    #[test]
    fn example_matrix_ratios() {
        let ratios = example_poly().ratio_entries().unwrap();
        let expect = [
            int(448),
            frac(3, 2),
            frac(5, 6),
            frac(1, 2),
            frac(3, 10),
            frac(1, 6),
            frac(1, 14),
        ];
        assert_eq!(ratios, expect);
        let m = from_polynomial(&example_poly())
            .numerator_matrix(9)
            .unwrap();
        assert_eq!(m.get(7, 1), &frac(1, 14));
        assert_eq!(m.get(8, 1), &int(0));
        assert_eq!(m.get(9, 3), &frac(1, 14));
        assert_eq!(m.get(9, 8), &frac(3, 2));
    }

    #[test]
    fn zero_trailing_coefficient_rejected() {
        assert_eq!(
            MonicRecurrencePoly::from_ints(&[1, 0]),
            Err(Error::ZeroTrailingCoefficient)
        );
        assert_eq!(
            MonicRecurrencePoly::from_ints(&[]),
            Err(Error::EmptyPolynomial)
        );
    }

    #[test]
    fn periodic_q_is_previous_p() {
        let p = MonicRecurrencePoly::new(vec![frac(3, 2), int(-2), frac(1, 7)]).unwrap();
        let ts: Vec<Truncation> = from_polynomial(&p).truncations().take(20).collect();
        assert_eq!(ts[0].q, int(1));
        for w in ts.windows(2) {
            assert_eq!(w[1].q, w[0].p);
        }
    }

    #[test]
    fn undefined_truncation_is_reported() {
        let rf = from_polynomial(&MonicRecurrencePoly::from_ints(&[0, -1]).unwrap());
        let t2 = rf.truncation(2).unwrap();
        assert_eq!(t2.q, int(0));
        assert_eq!(t2.value(), None);
    }

    #[test]
    fn dominant_root_silver_ratio() {
        let p = MonicRecurrencePoly::from_ints(&[2, 1]).unwrap();
        let r = dominant_root(&p, 10, 200).unwrap();
        let sqrt2 = nth_root_interval(&int(2), 2, 20).unwrap();
        let lo = &sqrt2.lower + int(1);
        let hi = &sqrt2.upper + int(1);
        let tol = frac(1, 10_000_000_000);
        assert!((&r.value - &lo).abs() < tol && (&r.value - &hi).abs() < tol);
        assert!(r.certified_digits >= 10);
    }

    #[test]
    fn dominant_root_example() {
        let r = dominant_root(&example_poly(), 24, 100).unwrap();
        let reference =
            parse_rational("44949777653359235287015302078/100000000000000000000000000").unwrap();
        assert!((&r.value - reference).abs() < Rational::new(BigInt::one(), pow10(24)));
        assert!(r.certified_digits >= 24);
        // the 9th truncation is already 24-digit accurate; the 3-agreement rule
        // can only certify it a couple of steps later
        assert!(r.iterations_used <= 12, "used {}", r.iterations_used);
    }

    #[test]
    fn no_dominant_root() {
        let p = MonicRecurrencePoly::from_ints(&[0, -1]).unwrap();
        match dominant_root(&p, 10, 50) {
            Err(Error::NonConvergence { evidence, .. }) => assert!(!evidence.is_empty()),
            other => panic!("expected non-convergence, got {other:?}"),
        }
        // roots 1 and -1: equal moduli
        let p = MonicRecurrencePoly::from_ints(&[0, 1]).unwrap();
        assert!(matches!(
            dominant_root(&p, 5, 60),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn binomial_polynomials() {
        assert_eq!(
            MonicRecurrencePoly::binomial(2, &int(1), 1).unwrap(),
            MonicRecurrencePoly::from_ints(&[2, 1]).unwrap()
        );
        assert_eq!(
            MonicRecurrencePoly::binomial(7, &int(2), 1).unwrap(),
            example_poly()
        );
        assert_eq!(
            MonicRecurrencePoly::binomial(3, &int(2), -1).unwrap(),
            MonicRecurrencePoly::from_ints(&[12, -6, 1]).unwrap()
        );
    }

    #[test]
    fn super_fraction_matches_example() {
        let sf = super_fraction(7, 2).unwrap();
        assert!(sf
            .equal_up_to(&from_polynomial(&example_poly()), 12)
            .unwrap());
        assert_eq!(sf.period(), Some(1));
        let ratios = example_poly().ratio_entries().unwrap();
        for i in 2..=7u32 {
            assert_eq!(
                ratios[i as usize - 1],
                frac((7 - i + 1) as i64, 2 * i as i64)
            );
        }
    }

    #[test]
    fn complete_homogeneous_examples() {
        assert_eq!(complete_homogeneous_brute(&[int(1), int(1)], 3), int(4));
        assert_eq!(complete_homogeneous(&[int(1), int(1)], 3), int(4));
        assert_eq!(
            complete_homogeneous_brute(&[int(1), int(2), int(3)], 2),
            int(25)
        );
        assert_eq!(complete_homogeneous(&[int(1), int(2), int(3)], 2), int(25));
        assert_eq!(complete_homogeneous(&[int(5)], 0), int(1));
        for m in 0..12 {
            // h_m(2, 1) = 2^(m+1) - 1
            assert_eq!(
                complete_homogeneous(&[int(2), int(1)], m),
                int((1 << (m + 1)) - 1)
            );
        }
    }

    #[test]
    fn limit_residual_shrinks_for_distinct_moduli() {
        // roots 2 and 1
        let p = MonicRecurrencePoly::new(coefficients_from_roots(&[int(2), int(1)])).unwrap();
        let root = DecimalInterval::exact(int(2), 0);
        let r: Vec<Rational> = (1..12)
            .map(|m| lemma1_limit_check(&p, std::slice::from_ref(&root), m).unwrap())
            .collect();
        for w in r.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn symmetric_roots_have_no_limit() {
        let p = MonicRecurrencePoly::new(coefficients_from_roots(&[int(3), int(-3)])).unwrap();
        let root = DecimalInterval::exact(int(3), 0);
        assert_eq!(
            lemma1_limit_check(&p, std::slice::from_ref(&root), 2),
            Err(Error::DivisionByZero)
        );
        assert_eq!(lemma1_limit_check(&p, &[root], 3).unwrap(), int(3));
    }

    #[test]
    fn ordinary_and_equal() {
        let a = RecurrentFraction::periodic(2, vec![vec![int(3), int(1)]]).unwrap();
        assert!(a.is_ordinary(10).unwrap());
        let b = RecurrentFraction::periodic(2, vec![vec![int(3), int(2)]]).unwrap();
        assert!(!b.is_ordinary(10).unwrap());
        assert!(!a.equal_up_to(&b, 5).unwrap());
        let two_periodic =
            RecurrentFraction::periodic(2, vec![vec![int(3), int(1)], vec![int(3), int(1)]])
                .unwrap();
        assert!(a.equal_up_to(&two_periodic, 20).unwrap());
    }

    #[test]
    fn poly_display() {
        assert_eq!(
            example_poly().to_string(),
            "x^7 = 448x^6 + 672x^5 + 560x^4 + 280x^3 + 84x^2 + 14x + 1"
        );
        assert_eq!(
            MonicRecurrencePoly::from_ints(&[12, -6, 1])
                .unwrap()
                .to_string(),
            "x^3 = 12x^2 - 6x + 1"
        );
        assert_eq!(
            MonicRecurrencePoly::from_ints(&[0, -1])
                .unwrap()
                .to_string(),
            "x^2 = - 1"
        );
    }
}
