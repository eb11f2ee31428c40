//! (n,m)-forms: elements `s_0 + s_1 m^(1/n) + ... + s_(n-1) m^((n-1)/n)`.
//!
//! A form is stored as its coordinate tuple. Arithmetic goes through the
//! circulant embedding
//!
//! ```text
//! X[i][j] = s_(i-j)        for i >= j
//! X[i][j] = m s_(n+i-j)    for i <  j
//! ```
//!
//! which turns form multiplication into matrix multiplication. The norm is
//! `det X`, the conjugate is the form whose embedding is the adjugate of
//! `X`, and the characteristic polynomial comes from principal minors.
//!
//! Nothing here checks that `m^(1/n)` really has degree n. For a perfect
//! power radicand (say n=2, m=4) the forms make a ring with zero divisors;
//! every operation still computes, and `conjugate`/`inverse` report
//! [`Error::ZeroNorm`] where they must.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bigmath::{
    decimal_render, det_exact, int, nth_root_interval, parse_rational, pow, rational_serde,
    rational_text, rational_vec_serde, DecimalInterval, Rational, SquareMatrix,
};
use crate::error::{Error, Result};
use crate::recfrac::MonicRecurrencePoly;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NmForm {
    n: usize,
    #[serde(with = "rational_serde")]
    m: Rational,
    #[serde(with = "rational_vec_serde")]
    coords: Vec<Rational>,
}

impl NmForm {
    /// Form of degree `coords.len()` over radicand `m`.
    pub fn new(m: Rational, coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter(
                "a form needs at least one coordinate".into(),
            ));
        }
        Ok(Self {
            n: coords.len(),
            m,
            coords,
        })
    }

    pub fn from_ints(m: i64, coords: &[i64]) -> Result<Self> {
        Self::new(int(m), coords.iter().map(|&c| int(c)).collect())
    }

    pub fn scalar(n: usize, m: Rational, c: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("degree must be at least 1".into()));
        }
        let mut coords = vec![Rational::zero(); n];
        coords[0] = c;
        Ok(Self { n, m, coords })
    }

    pub fn identity(n: usize, m: Rational) -> Result<Self> {
        Self::scalar(n, m, Rational::one())
    }

    pub fn zero(n: usize, m: Rational) -> Result<Self> {
        Self::scalar(n, m, Rational::zero())
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn radicand(&self) -> &Rational {
        &self.m
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Integer coordinates over an integer radicand.
    pub fn is_integral(&self) -> bool {
        self.m.is_integer() && self.coords.iter().all(|c| c.is_integer())
    }

    fn field_label(&self) -> String {
        format!("{}, {}", self.n, rational_text(&self.m))
    }

    fn same_field(&self, other: &NmForm) -> Result<()> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::FieldMismatch(
                self.field_label(),
                other.field_label(),
            ));
        }
        Ok(())
    }

    /// The circulant embedding; its first column is the coordinate tuple.
    pub fn embed(&self) -> SquareMatrix {
        let n = self.n;
        SquareMatrix::from_fn(n, |i, j| {
            if i >= j {
                self.coords[i - j].clone()
            } else {
                &self.m * &self.coords[n + i - j]
            }
        })
    }

    /// Inverse of [`Self::embed`]: reads the first column.
    pub fn from_embedding(m: Rational, x: &SquareMatrix) -> Result<Self> {
        Self::new(m, x.column(0))
    }

    /// Coordinates of the product, `s_i = sum_(j<=i) s'_j s''_(i-j) + m sum_(j>i) s'_j s''_(n+i-j)`.
    pub fn multiply(&self, other: &NmForm) -> Result<NmForm> {
        self.same_field(other)?;
        let n = self.n;
        let mut out = vec![Rational::zero(); n];
        for (j, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let am = a * &self.m;
            for (l, b) in other.coords.iter().enumerate() {
                if j + l < n {
                    out[j + l] += a * b;
                } else {
                    out[j + l - n] += &am * b;
                }
            }
        }
        Ok(Self {
            n,
            m: self.m.clone(),
            coords: out,
        })
    }

    pub fn add(&self, other: &NmForm) -> Result<NmForm> {
        self.same_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            n: self.n,
            m: self.m.clone(),
            coords,
        })
    }

    pub fn sub(&self, other: &NmForm) -> Result<NmForm> {
        self.same_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            n: self.n,
            m: self.m.clone(),
            coords,
        })
    }

    pub fn scale(&self, c: &Rational) -> NmForm {
        Self {
            n: self.n,
            m: self.m.clone(),
            coords: self.coords.iter().map(|s| s * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> NmForm {
        let mut acc = Self::identity(self.n, self.m.clone()).expect("degree >= 1");
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base).expect("same field");
            }
        }
        acc
    }

    pub fn norm(&self) -> Rational {
        det_exact(&self.embed())
    }

    /// Form whose embedding is `det(X) X^-1`, i.e. the first column of the
    /// adjugate: `adj[i][0] = (-1)^i det(minor(0, i))`.
    pub fn conjugate(&self) -> Result<NmForm> {
        if self.norm().is_zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.adjugate_column())
    }

    fn adjugate_column(&self) -> NmForm {
        let x = self.embed();
        let coords = (0..self.n)
            .map(|i| match x.minor(0, i) {
                None => Rational::one(),
                Some(minor) => {
                    let d = det_exact(&minor);
                    if i % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                }
            })
            .collect();
        Self {
            n: self.n,
            m: self.m.clone(),
            coords,
        }
    }

    pub fn inverse(&self) -> Result<NmForm> {
        let norm = self.norm();
        if norm.is_zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.adjugate_column().scale(&norm.recip()))
    }

    /// Characteristic polynomial coefficients `a_1..a_n` in the convention
    /// `x^n = a_1 x^(n-1) + ... + a_n`, with `a_j = (-1)^(j-1)` times the sum
    /// of all j×j principal minors of the embedding.
    pub fn min_poly_coeffs(&self) -> Vec<Rational> {
        let x = self.embed();
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        for j in 1..=n {
            let mut sum = Rational::zero();
            for_each_subset(n, j, &mut |idx| sum += det_exact(&x.principal(idx)));
            out.push(if j % 2 == 1 { sum } else { -sum });
        }
        out
    }

    /// [`Self::min_poly_coeffs`] as a polynomial; fails for zero-norm forms,
    /// whose trailing coefficient vanishes.
    pub fn min_poly(&self) -> Result<MonicRecurrencePoly> {
        MonicRecurrencePoly::new(self.min_poly_coeffs())
    }

    /// `x^n - a_1 x^(n-1) - ... - a_n` evaluated in form arithmetic; the
    /// zero form for every input.
    pub fn cayley_hamilton_residual(&self) -> NmForm {
        let coeffs = self.min_poly_coeffs();
        // Horner: ((x - a_1) x - a_2) x - ... - a_n
        let one = Self::identity(self.n, self.m.clone()).expect("degree >= 1");
        let mut acc = one.clone();
        for a in &coeffs {
            acc = acc
                .multiply(self)
                .expect("same field")
                .sub(&one.scale(a))
                .expect("same field");
        }
        acc
    }

    /// Enclosure of the real value `sum s_i (m^(1/n))^i`, each power taken as
    /// the n-th root of `m^i` so that exact partial roots stay exact.
    pub fn eval_interval(&self, digits: u32) -> Result<DecimalInterval> {
        let n = self.n as u32;
        let mut lower = Rational::zero();
        let mut upper = Rational::zero();
        for (i, s) in self.coords.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let root = nth_root_interval(&pow(&self.m, i as u32), n, digits)?;
            let (a, b) = (s * &root.lower, s * &root.upper);
            if a <= b {
                lower += a;
                upper += b;
            } else {
                lower += b;
                upper += a;
            }
        }
        Ok(DecimalInterval {
            lower,
            upper,
            digits,
        })
    }

    /// Truncated decimal value, certified: internal precision grows until both
    /// ends of the enclosure truncate to the same text.
    pub fn eval_decimal(&self, digits: u32) -> Result<String> {
        let cap = digits.saturating_mul(4).saturating_add(200);
        let mut precision = digits + 8;
        loop {
            let iv = self.eval_interval(precision)?;
            let lo = decimal_render(&iv.lower, digits);
            if lo == decimal_render(&iv.upper, digits) {
                return Ok(lo);
            }
            if precision >= cap {
                return Err(Error::PrecisionLimit(digits));
            }
            precision = (precision * 2).min(cap);
        }
    }
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// The `(n, m^n + sign)` super-form with coordinates `m^(n-1-i)`, paired with
/// the polynomial `x^n = sum_s sign^(s-1) C(n,s) m^(n-s) x^(n-s)` it satisfies.
pub fn super_form(n: u32, m: u32, sign: i32) -> Result<(NmForm, MonicRecurrencePoly)> {
    if n < 2 || m < 1 {
        return Err(Error::InvalidParameter(format!(
            "super-form needs n >= 2 and m >= 1 (got {n}, {m})"
        )));
    }
    let mr = int(m.into());
    let radicand = pow(&mr, n) + int(sign.into());
    if radicand.is_zero() {
        return Err(Error::DegenerateRadicand(format!("{m}^{n} - 1 = 0")));
    }
    let poly = MonicRecurrencePoly::binomial(n, &mr, sign)?;
    let coords = (0..n).map(|i| pow(&mr, n - 1 - i)).collect();
    Ok((NmForm::new(radicand, coords)?, poly))
}

impl fmt::Display for NmForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coords.iter().map(rational_text).collect();
        write!(
            f,
            "({}, {}, [{}])",
            self.n,
            rational_text(&self.m),
            coords.join(", ")
        )
    }
}

impl FromStr for NmForm {
    type Err = Error;

    /// Parses `(n, m, [s0, s1, ...])` with rational literals `p/q`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("form literal {text:?}: {why}"));
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad("expected (n, m, [s0, ...])"))?;
        let open = inner.find('[').ok_or_else(|| bad("missing '['"))?;
        let close = inner.rfind(']').ok_or_else(|| bad("missing ']'"))?;
        if close < open || !inner[close + 1..].trim().is_empty() {
            return Err(bad("coordinates must be the last field"));
        }
        let head: Vec<&str> = inner[..open].split(',').map(str::trim).collect();
        let [n_text, m_text, rest] = head.as_slice() else {
            return Err(bad("expected exactly n and m before the coordinates"));
        };
        if !rest.is_empty() {
            return Err(bad("unexpected text before '['"));
        }
        let n: usize = n_text
            .parse()
            .map_err(|_| bad("degree is not a positive integer"))?;
        let m = parse_rational(m_text)?;
        let body = inner[open + 1..close].trim();
        let coords = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|c| parse_rational(c.trim()))
                .collect::<Result<Vec<_>>>()?
        };
        if n == 0 || coords.len() != n {
            return Err(bad(&format!("degree {n} but {} coordinates", coords.len())));
        }
        NmForm::new(m, coords)
    }
}

/// `C(n, k)` as a big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigmath::frac;

    fn form(m: i64, c: &[i64]) -> NmForm {
        NmForm::from_ints(m, c).unwrap()
    }

    #[test]
    fn embeddings() {
        let x = form(4, &[5, 3, 2]).embed();
        let expect = SquareMatrix::from_rows(
            [[5, 8, 12], [3, 5, 8], [2, 3, 5]]
                .iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(x, expect);
        assert_eq!(
            form(9, &[7]).embed(),
            SquareMatrix::from_rows(vec![vec![int(7)]]).unwrap()
        );
        assert_eq!(
            form(2, &[3, 2]).embed().rows(),
            vec![vec![int(3), int(4)], vec![int(2), int(3)]]
        );
    }

    #[test]
    fn products() {
        assert!(form(4, &[5, 3, 2])
            .multiply(&form(4, &[1, 1, -1]))
            .unwrap()
            .is_identity());
        assert!(form(-4, &[1, -1, 2, -2, 1])
            .multiply(&form(-4, &[-3, 1, 3, 3, 2]))
            .unwrap()
            .is_identity());
        let x = form(3, &[2, -1, 4]);
        assert_eq!(
            x.multiply(&NmForm::identity(3, int(3)).unwrap()).unwrap(),
            x
        );
    }

    #[test]
    fn product_matches_matrix_product() {
        let a = NmForm::new(frac(-7, 3), vec![frac(1, 2), int(3), int(-2), frac(5, 7)]).unwrap();
        let b = NmForm::new(frac(-7, 3), vec![int(4), frac(-1, 3), int(0), int(9)]).unwrap();
        assert_eq!(a.multiply(&b).unwrap().embed(), &a.embed() * &b.embed());
    }

    #[test]
    fn mismatched_fields() {
        assert!(matches!(
            form(2, &[1, 1]).multiply(&form(3, &[1, 1])),
            Err(Error::FieldMismatch(..))
        ));
        assert!(matches!(
            form(2, &[1, 1]).add(&form(2, &[1, 1, 1])),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn norms() {
        assert_eq!(form(4, &[5, 3, 2]).norm(), int(1));
        assert_eq!(form(-2, &[-1, -1, 0]).norm(), int(1));
        assert_eq!(form(2, &[3, 2]).norm(), int(1));
        assert_eq!(form(7, &[2, 5]).norm(), int(4 - 7 * 25));
    }

    #[test]
    fn conjugates_and_inverses() {
        let x = form(2, &[1, 1]);
        let c = x.conjugate().unwrap();
        assert_eq!(c, form(2, &[1, -1]));
        assert_eq!(x.multiply(&c).unwrap(), form(2, &[-1, 0]));
        assert_eq!(
            form(4, &[5, 3, 2]).conjugate().unwrap(),
            form(4, &[1, 1, -1])
        );
        assert_eq!(
            form(-4, &[1, -1, 2, -2, 1]).inverse().unwrap(),
            form(-4, &[-3, 1, 3, 3, 2])
        );
        let one = NmForm::identity(4, int(5)).unwrap();
        assert_eq!(one.conjugate().unwrap(), one);
        assert_eq!(one.inverse().unwrap(), one);
        assert_eq!(
            form(5, &[7]).inverse().unwrap(),
            NmForm::new(int(5), vec![frac(1, 7)]).unwrap()
        );
    }

    #[test]
    fn zero_norm() {
        // (2 - sqrt 4) vanishes
        let x = form(4, &[2, -1]);
        assert_eq!(x.norm(), int(0));
        assert_eq!(x.conjugate(), Err(Error::ZeroNorm));
        assert_eq!(x.inverse(), Err(Error::ZeroNorm));
    }

    #[test]
    fn small_min_polys() {
        assert_eq!(form(2, &[1, 1]).min_poly_coeffs(), vec![int(2), int(1)]);
        assert_eq!(
            form(2, &[1, 1]).min_poly().unwrap().to_string(),
            "x^2 = 2x + 1"
        );
        let x = form(5, &[3, 2, 7]);
        let c = x.min_poly_coeffs();
        assert_eq!(c[0], int(9));
        let minor =
            SquareMatrix::from_rows(vec![vec![int(3), int(35)], vec![int(2), int(3)]]).unwrap();
        assert_eq!(c[1], int(-3) * minor.det());
        assert_eq!(c[2], x.norm());
    }

    #[test]
    fn cayley_hamilton_holds() {
        let x = NmForm::new(frac(3, 2), vec![int(1), frac(-2, 5), int(3), int(0)]).unwrap();
        assert!(x.cayley_hamilton_residual().is_zero());
    }

    #[test]
    fn super_forms() {
        let (f, p) = super_form(2, 1, 1).unwrap();
        assert_eq!(f, form(2, &[1, 1]));
        assert_eq!(p.coeffs(), &[int(2), int(1)]);
        let (f, p) = super_form(3, 2, -1).unwrap();
        assert_eq!(f, form(7, &[4, 2, 1]));
        assert_eq!(p.coeffs(), &[int(12), int(-6), int(1)]);
        assert_eq!(f.min_poly_coeffs(), p.coeffs());
        let (_, p) = super_form(7, 2, 1).unwrap();
        assert_eq!(
            p.coeffs(),
            MonicRecurrencePoly::from_ints(&[448, 672, 560, 280, 84, 14, 1])
                .unwrap()
                .coeffs()
        );
        assert!(matches!(
            super_form(4, 1, -1),
            Err(Error::DegenerateRadicand(_))
        ));
    }

    #[test]
    fn decimal_values() {
        assert_eq!(
            NmForm::identity(3, int(2))
                .unwrap()
                .eval_decimal(4)
                .unwrap(),
            "1.0000"
        );
        assert_eq!(form(2, &[0, 1, 0]).eval_decimal(6).unwrap(), "1.259921");
        assert_eq!(
            form(129, &[64, 32, 16, 8, 4, 2, 1])
                .eval_decimal(26)
                .unwrap(),
            "449.49777653359235287015302078"
        );
        assert_eq!(form(-8, &[1, 1, 0]).eval_decimal(2).unwrap(), "-1.00");
        assert_eq!(
            form(-2, &[0, 1]).eval_decimal(2),
            Err(Error::EvenRootOfNegative)
        );
    }

    #[test]
    fn literals() {
        let x: NmForm = "(3, 4, [5,3,2])".parse().unwrap();
        assert_eq!(x, form(4, &[5, 3, 2]));
        let y: NmForm = " (2, -7/3, [1/2, -4]) ".parse().unwrap();
        assert_eq!(y.to_string(), "(2, -7/3, [1/2, -4])");
        assert_eq!(y.to_string().parse::<NmForm>().unwrap(), y);
        for bad in [
            "(3, 4, [5,3])",
            "3, 4, [5,3,2]",
            "(3, [1,2,3])",
            "(0, 1, [])",
            "(2, x, [1,1])",
            "(2, 1, [1,1] 5)",
        ] {
            assert!(bad.parse::<NmForm>().is_err(), "{bad}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), BigInt::from(35));
        assert_eq!(binomial(11, 0), BigInt::from(1));
    }
}
