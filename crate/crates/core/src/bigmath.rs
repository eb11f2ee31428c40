//! Exact scalar arithmetic and the linear-algebra kernels the other modules
//! share: fraction-free determinants, n-th root enclosures and truncated
//! decimal rendering.

use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational; always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn big(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// Parses `p`, `-p` or `p/q` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let parse = |s: &str| {
        s.parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational literal: {text:?}")))
    };
    let (n, d) = (parse(num)?, parse(den)?);
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Renders as `p` for integers and `p/q` otherwise.
pub fn rational_text(q: &Rational) -> String {
    q.to_string()
}

pub fn pow(q: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Square matrix of rationals stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    order: usize,
    entries: Vec<Rational>,
}

impl SquareMatrix {
    pub fn new(order: usize, entries: Vec<Rational>) -> Result<Self> {
        if order == 0 {
            return Err(Error::MalformedMatrix("order must be at least 1".into()));
        }
        if entries.len() != order * order {
            return Err(Error::MalformedMatrix(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                entries.len()
            )));
        }
        Ok(Self { order, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::MalformedMatrix("rows must all have length n".into()));
        }
        Self::new(order, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(order >= 1, "matrix order must be at least 1");
        let entries = (0..order * order)
            .map(|k| f(k / order, k % order))
            .collect();
        Self { order, entries }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry at 0-based row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.order + j]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.order).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries
            .chunks(self.order)
            .map(|r| r.to_vec())
            .collect()
    }

    /// Principal submatrix on the given (0-based, increasing) indices.
    pub fn principal(&self, idx: &[usize]) -> SquareMatrix {
        SquareMatrix::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]).clone())
    }

    /// The matrix with row `row` and column `col` deleted; `None` for order 1.
    pub fn minor(&self, row: usize, col: usize) -> Option<SquareMatrix> {
        if self.order == 1 {
            return None;
        }
        let keep_r: Vec<usize> = (0..self.order).filter(|&i| i != row).collect();
        let keep_c: Vec<usize> = (0..self.order).filter(|&j| j != col).collect();
        Some(SquareMatrix::from_fn(self.order - 1, |a, b| {
            self.get(keep_r[a], keep_c[b]).clone()
        }))
    }

    pub fn scale(&self, c: &Rational) -> SquareMatrix {
        SquareMatrix {
            order: self.order,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn det(&self) -> Rational {
        det_exact(self)
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.order, rhs.order, "matrix orders differ");
        let n = self.order;
        SquareMatrix::from_fn(n, |i, j| {
            (0..n).fold(Rational::zero(), |acc, k| {
                acc + self.get(i, k) * rhs.get(k, j)
            })
        })
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.order).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|q| q.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Exact determinant.
///
/// Each row is scaled by the lcm of its denominators, the resulting integer
/// matrix is reduced with Bareiss' fraction-free elimination, and the scales
/// are divided back out at the end. Every division inside the elimination is
/// exact.
pub fn det_exact(m: &SquareMatrix) -> Rational {
    let n = m.order();
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = (0..n).fold(BigInt::one(), |acc, j| acc.lcm(m.get(i, j).denom()));
        let row = (0..n)
            .map(|j| {
                let q = m.get(i, j);
                q.numer() * (&l / q.denom())
            })
            .collect();
        scale *= &l;
        a.push(row);
    }

    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = if negate { -prev } else { prev };
    Rational::new(d, scale)
}

/// Closed interval `[lower, upper]` produced for a requested count of
/// decimal digits after the point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalInterval {
    #[serde(with = "rational_serde")]
    pub lower: Rational,
    #[serde(with = "rational_serde")]
    pub upper: Rational,
    pub digits: u32,
}

impl DecimalInterval {
    pub fn exact(q: Rational, digits: u32) -> Self {
        Self {
            lower: q.clone(),
            upper: q,
            digits,
        }
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lower <= q && q <= &self.upper
    }
}

pub fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), e as usize)
}

/// Encloses the real n-th root of `x` in an interval of width at most
/// `10^-digits`.
///
/// The search runs on the decimal grid of step `10^-digits`: bisection finds
/// the largest grid point `r` with `r^n <= |x|`, so the result is
/// `[r, r + 10^-digits]`, collapsing to a point when `r` is the exact root.
/// Negative `x` is allowed for odd `n` and handled by symmetry.
pub fn nth_root_interval(x: &Rational, n: u32, digits: u32) -> Result<DecimalInterval> {
    if n == 0 {
        return Err(Error::ZeroRootIndex);
    }
    if x.is_negative() && n.is_multiple_of(2) {
        return Err(Error::EvenRootOfNegative);
    }
    let a = x.abs();
    let step = pow10(digits);
    // |x| * 10^(digits*n), split into integer part and an exactness flag
    let scaled = &a * big(num_traits::pow(step.clone(), n as usize));
    let target = scaled.to_integer();
    let scaled_is_integer = scaled.is_integer();

    let mut lo = BigInt::zero();
    let mut hi = BigInt::one() << (target.bits() / u64::from(n) + 1);
    // invariant: lo^n <= target < hi^n
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if num_traits::pow(mid.clone(), n as usize) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert_eq!(lo, target.nth_root(n));

    let exact = scaled_is_integer && num_traits::pow(lo.clone(), n as usize) == target;
    let lower = Rational::new(lo.clone(), step.clone());
    let upper = if exact {
        lower.clone()
    } else {
        Rational::new(lo + 1, step)
    };
    let (lower, upper) = if x.is_negative() {
        (-upper, -lower)
    } else {
        (lower, upper)
    };
    Ok(DecimalInterval {
        lower,
        upper,
        digits,
    })
}

/// Fixed-point decimal text with exactly `digits` digits after the point,
/// truncated toward zero. A value that truncates to zero is printed without
/// a sign; `digits == 0` prints no point at all.
pub fn decimal_render(q: &Rational, digits: u32) -> String {
    let scaled = (q.abs() * big(pow10(digits))).to_integer();
    let mut body = scaled.to_str_radix(10);
    if digits > 0 {
        let d = digits as usize;
        if body.len() <= d {
            body = format!("{}{}", "0".repeat(d + 1 - body.len()), body);
        }
        body.insert(body.len() - d, '.');
    }
    if q.is_negative() && scaled.sign() != Sign::NoSign {
        body.insert(0, '-');
    }
    body
}

/// Parses text produced by [`decimal_render`] back into an exact rational.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (ip, fp) = t.split_once('.').unwrap_or((t, ""));
    let digits: String = format!("{ip}{fp}");
    let n: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("not a decimal: {text:?}")))?;
    let q = Rational::new(n, pow10(fp.len() as u32));
    Ok(if neg { -q } else { q })
}

/// Serde adapter writing rationals as their `p/q` text.
pub mod rational_serde {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Same as [`rational_serde`] for vectors.
pub mod rational_vec_serde {
    use super::{parse_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
