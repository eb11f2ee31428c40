//! Triangular matrices and their two parafunctions.
//!
//! A triangular matrix of order n holds entries `a[i][j]` for
//! `1 <= j <= i <= n`. The factorial product `{a_ij}` of an entry is the
//! product of row `i` from column `j` through the diagonal. The
//! parapermanent sums, over every composition `p1 + ... + pr = n`, the
//! product of the factorial products of the key elements
//! `a[p1+..+ps][p1+..+p(s-1)+1]`; the paradeterminant weights each term by
//! `(-1)^(n-r)`.
//!
//! Three evaluators are provided and must agree: the definitional sum over
//! all `2^(n-1)` compositions, a quadratic dynamic program over suffix
//! corners (first-column expansion), and the expansion over an inscribed
//! rectangular table `T(i)`.
//!
//! Indices in this module's public API are 1-based to match the usual
//! notation `a_ij` and `R_ij`.

use std::fmt;

use num_traits::{One, Zero};

use crate::bigmath::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriMatrix {
    rows: Vec<Vec<Rational>>,
}

/// Which parafunction to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parafunction {
    Pper,
    Ddet,
}

impl Parafunction {
    /// Sign attached to a term; `parity` is the exponent of -1.
    fn sign(self, parity: usize) -> bool {
        matches!(self, Parafunction::Ddet) && parity % 2 == 1
    }
}

impl TriMatrix {
    /// Row `i` (0-based) must hold exactly `i + 1` entries.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::MalformedMatrix(
                "triangular matrix needs at least one row".into(),
            ));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != i + 1 {
                return Err(Error::MalformedMatrix(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    r.len(),
                    i + 1
                )));
            }
        }
        Ok(Self { rows })
    }

    /// Builds the matrix from `f(i, j)` with 1-based `1 <= j <= i <= order`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(order >= 1, "triangular matrix order must be at least 1");
        let rows = (1..=order)
            .map(|i| (1..=i).map(|j| f(i, j)).collect())
            .collect();
        Self { rows }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    /// `a_ij`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    fn check_entry(&self, i: usize, j: usize) -> Result<()> {
        if j >= 1 && j <= i && i <= self.order() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!(
                "({i}, {j}) for a triangular matrix of order {}",
                self.order()
            )))
        }
    }

    /// The corner `R_ij`: the triangular matrix of order `i - j + 1` with
    /// `a_ij` in its bottom-left position. The pairs `(0, 1)` and
    /// `(n, n + 1)` give the empty corner, whose parafunctions equal 1.
    pub fn corner(&self, i: usize, j: usize) -> Result<Corner> {
        let n = self.order();
        if (i, j) == (0, 1) || (i, j) == (n, n + 1) {
            return Ok(Corner { i, j, matrix: None });
        }
        self.check_entry(i, j)?;
        let matrix = TriMatrix::from_fn(i - j + 1, |r, s| self.get(r + j - 1, s + j - 1).clone());
        Ok(Corner {
            i,
            j,
            matrix: Some(matrix),
        })
    }

    /// `{a_ij} = a_ij * a_i,j+1 * ... * a_ii`.
    pub fn factorial_product(&self, i: usize, j: usize) -> Result<Rational> {
        self.check_entry(i, j)?;
        Ok(self.rows[i - 1][j - 1..].iter().product())
    }

    /// `fp[i][j]` for all entries, via suffix products of each row.
    fn factorial_products(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| {
                let mut out = vec![Rational::zero(); row.len()];
                let mut acc = Rational::one();
                for (j, a) in row.iter().enumerate().rev() {
                    if a.is_zero() {
                        break;
                    }
                    acc *= a;
                    out[j] = acc.clone();
                }
                out
            })
            .collect()
    }

    /// Definitional evaluation: sum over every composition of `n`.
    pub fn eval_def(&self, kind: Parafunction) -> Rational {
        let n = self.order();
        let fp = self.factorial_products();
        let mut total = Rational::zero();
        for parts in compositions(n) {
            let mut term = Rational::one();
            let mut start = 0;
            for &p in &parts {
                // key element a[start + p][start + 1]
                term *= &fp[start + p - 1][start];
                start += p;
            }
            if kind.sign(n - parts.len()) {
                total -= term;
            } else {
                total += term;
            }
        }
        total
    }

    pub fn pper_def(&self) -> Rational {
        self.eval_def(Parafunction::Pper)
    }

    pub fn ddet_def(&self) -> Rational {
        self.eval_def(Parafunction::Ddet)
    }

    /// Values of the suffix corners `R_{n,j}` for `j = 1..=n+1` (index `j-1`),
    /// using the first-column expansion of each corner.
    fn suffix_corner_values(&self, kind: Parafunction) -> Vec<Rational> {
        let n = self.order();
        let fp = self.factorial_products();
        let mut f = vec![Rational::zero(); n + 1];
        f[n] = Rational::one();
        for j in (1..=n).rev() {
            let mut acc = Rational::zero();
            for r in j..=n {
                if fp[r - 1][j - 1].is_zero() {
                    continue;
                }
                let term = &fp[r - 1][j - 1] * &f[r];
                if kind.sign(r - j) {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            f[j - 1] = acc;
        }
        f
    }

    /// Quadratic-time evaluation by first-column expansion over suffix
    /// corners.
    pub fn eval_fast(&self, kind: Parafunction) -> Rational {
        self.suffix_corner_values(kind).swap_remove(0)
    }

    pub fn pper(&self) -> Rational {
        self.eval_fast(Parafunction::Pper)
    }

    pub fn ddet(&self) -> Rational {
        self.eval_fast(Parafunction::Ddet)
    }

    /// Expansion over the inscribed rectangular table `T(i)` whose corners
    /// are `a_n1` and `a_ii`:
    ///
    /// `sum_{s<=i} sum_{r>=i} {a_rs} * C_rs`, where the cofactor `C_rs` is
    /// `f(R_{s-1,1}) * f(R_{n,r+1})`, signed by `(-1)^(r+s)` for ddet.
    pub fn eval_expand_table(&self, i: usize, kind: Parafunction) -> Result<Rational> {
        let n = self.order();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange(format!(
                "table index {i} for order {n}"
            )));
        }
        let leading: Vec<Rational> = (1..=i)
            .map(|s| self.corner(s - 1, 1).map(|c| c.eval(kind)))
            .collect::<Result<_>>()?;
        let trailing: Vec<Rational> = (i..=n)
            .map(|r| self.corner(n, r + 1).map(|c| c.eval(kind)))
            .collect::<Result<_>>()?;
        let mut total = Rational::zero();
        for s in 1..=i {
            for r in i..=n {
                let term = self.factorial_product(r, s)? * &leading[s - 1] * &trailing[r - i];
                if kind.sign(r + s) {
                    total -= term;
                } else {
                    total += term;
                }
            }
        }
        Ok(total)
    }

    pub fn pper_expand_table(&self, i: usize) -> Result<Rational> {
        self.eval_expand_table(i, Parafunction::Pper)
    }

    pub fn ddet_expand_table(&self, i: usize) -> Result<Rational> {
        self.eval_expand_table(i, Parafunction::Ddet)
    }
}

impl fmt::Display for TriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|q| q.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A corner `R_ij` of a triangular matrix, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corner {
    pub i: usize,
    pub j: usize,
    pub matrix: Option<TriMatrix>,
}

impl Corner {
    pub fn is_empty(&self) -> bool {
        self.matrix.is_none()
    }

    pub fn eval(&self, kind: Parafunction) -> Rational {
        match &self.matrix {
            Some(m) => m.eval_fast(kind),
            None => Rational::one(),
        }
    }

    pub fn pper(&self) -> Rational {
        self.eval(Parafunction::Pper)
    }

    pub fn ddet(&self) -> Rational {
        self.eval(Parafunction::Ddet)
    }
}

/// All compositions of `n` (ordered tuples of positive parts summing to
/// `n`) in lexicographic order.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in 1..=rest {
            cur.push(p);
            rec(rest - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, &mut Vec::new(), &mut out);
    }
    out
}
