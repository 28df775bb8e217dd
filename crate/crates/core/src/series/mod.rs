//! Truncated bivariate power series with exact coefficients, and the
//! multiplicative-function calculus built on them.

mod language;
mod multiplicative;
mod types;

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{render_q, Q};
use crate::error::{Error, Result};

pub use language::{
    count_l, count_l_series, is_l_word, l_word_to_multichain, l_words, multichain_of_word, multichains,
    refined_steps, shuffle_word_of, verify_l_bijection, AltLetter, Multichain,
};
pub use multiplicative::{
    convolve_closed_form, convolve_direct, product_identity, zeta_polynomial_gf, zeta_values,
    MultiplicativeFunction,
};
pub use types::{classify_elements, count_by_type, type_of, ShuffleType};

/// Working truncation used when none is given.
pub const DEFAULT_TRUNCATION: (usize, usize) = (8, 8);

/// `sum c_ij x^i y^j` for `i <= tx`, `j <= ty`. Products drop every term
/// outside the rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    tx: usize,
    ty: usize,
    coeffs: Vec<Q>,
}

impl BivariateSeries {
    pub fn zero(trunc: (usize, usize)) -> Self {
        let (tx, ty) = trunc;
        BivariateSeries { tx, ty, coeffs: vec![Q::zero(); (tx + 1) * (ty + 1)] }
    }

    pub fn constant(trunc: (usize, usize), c: Q) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = c;
        s
    }

    pub fn one(trunc: (usize, usize)) -> Self {
        Self::constant(trunc, Q::one())
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Q>(trunc: (usize, usize), mut f: F) -> Self {
        let mut s = Self::zero(trunc);
        for i in 0..=s.tx {
            for j in 0..=s.ty {
                let k = s.index(i, j);
                s.coeffs[k] = f(i, j);
            }
        }
        s
    }

    /// A polynomial given by its terms `(i, j, c)`; terms beyond the
    /// truncation are dropped.
    pub fn polynomial(trunc: (usize, usize), terms: &[(usize, usize, Q)]) -> Self {
        let mut s = Self::zero(trunc);
        for (i, j, c) in terms {
            if *i <= s.tx && *j <= s.ty {
                let k = s.index(*i, *j);
                s.coeffs[k] += c;
            }
        }
        s
    }

    pub fn truncation(&self) -> (usize, usize) {
        (self.tx, self.ty)
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i * (self.ty + 1) + j
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Q {
        &self.coeffs[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Q) {
        let k = self.index(i, j);
        self.coeffs[k] = c;
    }

    fn same_truncation(&self, other: &Self) -> Result<()> {
        if self.truncation() == other.truncation() {
            Ok(())
        } else {
            Err(Error::TruncationMismatch(self.truncation(), other.truncation()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_truncation(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(BivariateSeries { coeffs, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_truncation(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(BivariateSeries { coeffs, ..*self })
    }

    pub fn scale(&self, c: &Q) -> Self {
        BivariateSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect(), ..*self }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_truncation(other)?;
        let (tx, ty) = self.truncation();
        let coeffs = (0..(tx + 1) * (ty + 1))
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / (ty + 1), k % (ty + 1));
                let mut acc = Q::zero();
                for a in 0..=i {
                    for b in 0..=j {
                        let l = self.coeff(a, b);
                        if !l.is_zero() {
                            acc += l * other.coeff(i - a, j - b);
                        }
                    }
                }
                acc
            })
            .collect();
        Ok(BivariateSeries { tx, ty, coeffs })
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeff(0, 0).clone();
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let mut out = Self::zero(self.truncation());
        for i in 0..=self.tx {
            for j in 0..=self.ty {
                let mut acc = if (i, j) == (0, 0) { Q::one() } else { Q::zero() };
                for a in 0..=i {
                    for b in 0..=j {
                        if (a, b) == (0, 0) {
                            continue;
                        }
                        let l = self.coeff(a, b);
                        if !l.is_zero() {
                            acc -= l * out.coeff(i - a, j - b);
                        }
                    }
                }
                out.set(i, j, acc * &inv0);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        (0..k).try_fold(Self::one(self.truncation()), |acc, _| acc.mul(self))
    }

    /// `F(x, 0)`, kept at the same truncation.
    pub fn restrict_x(&self) -> Self {
        Self::from_fn(self.truncation(), |i, j| if j == 0 { self.coeff(i, 0).clone() } else { Q::zero() })
    }

    /// `F(0, y)`, kept at the same truncation.
    pub fn restrict_y(&self) -> Self {
        Self::from_fn(self.truncation(), |i, j| if i == 0 { self.coeff(0, j).clone() } else { Q::zero() })
    }

    /// `F(x, u y)`; `u` may involve both variables.
    pub fn substitute_y(&self, u: &Self) -> Result<Self> {
        self.same_truncation(u)?;
        let (tx, ty) = self.truncation();
        let mut acc = Self::zero(self.truncation());
        // (u y)^j, built incrementally
        let mut uy_pow = Self::one(self.truncation());
        let shift_y = Self::polynomial(self.truncation(), &[(0, 1, Q::one())]);
        let uy = u.mul(&shift_y)?;
        for j in 0..=ty {
            let column = Self::from_fn(self.truncation(), |i, b| {
                if b == 0 && i <= tx { self.coeff(i, j).clone() } else { Q::zero() }
            });
            acc = acc.add(&column.mul(&uy_pow)?)?;
            uy_pow = uy_pow.mul(&uy)?;
        }
        Ok(acc)
    }

    /// `F(u x, y)`.
    pub fn substitute_x(&self, u: &Self) -> Result<Self> {
        Ok(self.transpose().substitute_y(&u.transpose())?.transpose())
    }

    /// Exchange the roles of `x` and `y`.
    pub fn transpose(&self) -> Self {
        Self::from_fn((self.ty, self.tx), |i, j| self.coeff(j, i).clone())
    }

    /// `1 / ((1 - a x)(1 - b y))`.
    pub fn geometric(trunc: (usize, usize), a: &Q, b: &Q) -> Self {
        Self::from_fn(trunc, |i, j| num_traits::pow(a.clone(), i) * num_traits::pow(b.clone(), j))
    }

    /// Coefficients as rows indexed by the power of `x`.
    pub fn rows(&self) -> Vec<Vec<Q>> {
        (0..=self.tx).map(|i| (0..=self.ty).map(|j| self.coeff(i, j).clone()).collect()).collect()
    }
}

impl fmt::Display for BivariateSeries {
    /// A grid with one row per power of `x` and one column per power of `y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            self.rows().iter().map(|r| r.iter().map(render_q).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, q_frac};

    fn poly(terms: &[(usize, usize, i64)], t: usize) -> BivariateSeries {
        let terms: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, q(c))).collect();
        BivariateSeries::polynomial((t, t), &terms)
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_x = poly(&[(0, 0, 1), (1, 0, -1)], 6);
        let inv = one_minus_x.reciprocal().unwrap();
        assert_eq!(inv, BivariateSeries::geometric((6, 6), &q(1), &q(0)));
        assert_eq!(inv.mul(&one_minus_x).unwrap(), BivariateSeries::one((6, 6)));
        assert_eq!(poly(&[(1, 0, 1)], 3).reciprocal(), Err(Error::NotInvertible));
    }

    #[test]
    fn substitution_example() {
        let t = (6, 6);
        let f = BivariateSeries::geometric(t, &q(1), &q(1));
        let g0 = BivariateSeries::geometric(t, &q(0), &q(1));
        let tilde = f.substitute_y(&g0).unwrap();
        let num = poly(&[(0, 0, 1), (0, 1, -1)], 6);
        let den = poly(&[(0, 0, 1), (1, 0, -1)], 6).mul(&poly(&[(0, 0, 1), (0, 1, -2)], 6)).unwrap();
        assert_eq!(tilde, num.mul(&den.reciprocal().unwrap()).unwrap());
        assert_eq!(f.substitute_y(&BivariateSeries::one(t)).unwrap(), f);
        assert_eq!(f.substitute_x(&BivariateSeries::one(t)).unwrap(), f);
    }

    #[test]
    fn substitute_x_matches_transpose() {
        let t = (4, 4);
        let f = BivariateSeries::from_fn(t, |i, j| q_frac(i as i64 + 1, j as i64 + 2));
        let u = BivariateSeries::geometric(t, &q(0), &q(3));
        let direct = f.substitute_x(&u).unwrap();
        // coefficient of x y in F(u x, y) with u = 1/(1 - 3y): f_11 + 3 f_10
        assert_eq!(direct.coeff(1, 1), &(f.coeff(1, 1) + q(3) * f.coeff(1, 0)));
    }

    #[test]
    fn mismatched_truncations() {
        let a = BivariateSeries::one((2, 3));
        let b = BivariateSeries::one((3, 2));
        assert!(matches!(a.add(&b), Err(Error::TruncationMismatch(..))));
        assert_eq!(a.transpose(), b);
    }

    #[test]
    fn grid_rendering() {
        let s = poly(&[(0, 0, 1), (1, 1, -3)], 1);
        assert_eq!(s.to_string(), " 1  0\n 0 -3\n");
    }
}
