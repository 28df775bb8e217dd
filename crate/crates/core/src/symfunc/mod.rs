//! Homogeneous quasisymmetric functions with exact rational coefficients,
//! stored in the monomial quasisymmetric basis `M_alpha`.

mod flag;

pub use flag::{
    check_generating_identity, check_recurrence, flag_qsym, flag_qsym_weighted,
    frobenius_from_character, frobenius_from_orbit_types, mobius_flag_duality,
    shuffle_flag_closed_form,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{factorial, render_q, Q};
use crate::error::{Error, Result};
use crate::poset::RankSet;

/// A sequence of positive integers.
pub type Composition = Vec<usize>;

/// Every composition of `n`, in the bitmask order of their rank sets.
pub fn compositions(n: usize) -> Vec<Composition> {
    if n == 0 {
        return vec![Vec::new()];
    }
    RankSet::all(n).map(RankSet::composition).collect()
}

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sort the parts decreasingly; zero parts are dropped.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicity of each part size.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `z_lambda = prod(lambda_i) * prod(m_i!)`, the centralizer order of a
    /// permutation of cycle type `lambda`.
    pub fn z(&self) -> u128 {
        let parts: u128 = self.0.iter().map(|&p| p as u128).product();
        let mults: u128 = self.multiplicities().values().map(|&m| factorial(m)).product();
        parts * mults
    }

    /// All partitions of `n`, in increasing lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A basis of the degree-`n` symmetric functions, or a quasisymmetric one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Basis {
    #[serde(rename = "m")]
    Monomial,
    #[serde(rename = "e")]
    Elementary,
    #[serde(rename = "h")]
    Complete,
    #[serde(rename = "p")]
    Power,
    #[serde(rename = "M")]
    MonomialQuasi,
    #[serde(rename = "L")]
    Fundamental,
}

impl Basis {
    pub fn tag(self) -> &'static str {
        match self {
            Basis::Monomial => "m",
            Basis::Elementary => "e",
            Basis::Complete => "h",
            Basis::Power => "p",
            Basis::MonomialQuasi => "M",
            Basis::Fundamental => "L",
        }
    }
}

/// Two compositions with the same sorted parts but different coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotSymmetric(pub Composition, pub Composition);

/// A homogeneous quasisymmetric function of degree `degree`. The zero
/// function compares equal across degrees.
#[derive(Clone, Debug)]
pub struct SymPoly {
    degree: usize,
    coeffs: BTreeMap<Composition, Q>,
}

impl PartialEq for SymPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (self.degree == other.degree || self.coeffs.is_empty())
    }
}

impl Eq for SymPoly {}

impl SymPoly {
    pub fn zero(degree: usize) -> Self {
        SymPoly { degree, coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial_qsym(&[])
    }

    pub fn constant(c: Q) -> Self {
        Self::one().scale(&c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `M_alpha`.
    pub fn coeff(&self, alpha: &[usize]) -> Q {
        self.coeffs.get(alpha).cloned().unwrap_or_else(Q::zero)
    }

    /// Nonzero `M`-coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (&Composition, &Q)> {
        self.coeffs.iter()
    }

    /// Add `c * M_alpha`.
    pub fn add_term(&mut self, alpha: Composition, c: Q) {
        debug_assert_eq!(alpha.iter().sum::<usize>(), self.degree);
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(alpha).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn monomial_qsym(alpha: &[usize]) -> Self {
        let degree = alpha.iter().sum();
        let mut f = SymPoly::zero(degree);
        f.add_term(alpha.to_vec(), Q::one());
        f
    }

    /// `L_{S,n} = sum of M_alpha over the compositions alpha refining the gap
    /// composition of S`, i.e. whose rank sets contain S.
    pub fn fundamental(s: RankSet) -> Self {
        let n = s.height();
        let mut f = SymPoly::zero(n);
        if n == 0 {
            return SymPoly::one();
        }
        for t in RankSet::all(n).filter(|t| s.is_subset(*t)) {
            f.add_term(t.composition(), Q::one());
        }
        f
    }

    /// Monomial symmetric function: every distinct rearrangement of `lambda`.
    pub fn monomial(lambda: &Partition) -> Self {
        let mut f = SymPoly::zero(lambda.degree());
        let mut parts = lambda.parts().to_vec();
        parts.sort_unstable();
        loop {
            f.add_term(parts.clone(), Q::one());
            if !next_permutation(&mut parts) {
                break;
            }
        }
        f
    }

    pub fn e(j: usize) -> Self {
        Self::monomial_qsym(&vec![1; j])
    }

    pub fn h(j: usize) -> Self {
        let mut f = SymPoly::zero(j);
        for alpha in compositions(j) {
            f.add_term(alpha, Q::one());
        }
        f
    }

    pub fn p(j: usize) -> Self {
        if j == 0 {
            return SymPoly::one();
        }
        Self::monomial_qsym(&[j])
    }

    fn product_of(lambda: &Partition, gen: fn(usize) -> SymPoly) -> Self {
        lambda.parts().iter().fold(SymPoly::one(), |acc, &j| &acc * &gen(j))
    }

    pub fn e_partition(lambda: &Partition) -> Self {
        Self::product_of(lambda, SymPoly::e)
    }

    pub fn h_partition(lambda: &Partition) -> Self {
        Self::product_of(lambda, SymPoly::h)
    }

    pub fn p_partition(lambda: &Partition) -> Self {
        Self::product_of(lambda, SymPoly::p)
    }

    /// Basis element of a symmetric basis indexed by `lambda`.
    pub fn basis_element(basis: Basis, lambda: &Partition) -> Self {
        match basis {
            Basis::Monomial => Self::monomial(lambda),
            Basis::Elementary => Self::e_partition(lambda),
            Basis::Complete => Self::h_partition(lambda),
            Basis::Power => Self::p_partition(lambda),
            Basis::MonomialQuasi | Basis::Fundamental => {
                panic!("quasisymmetric bases are indexed by compositions")
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return SymPoly::zero(self.degree);
        }
        SymPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(SymPoly::one(), |acc, _| &acc * self)
    }

    /// Coefficients in the monomial symmetric basis, or a witness that the
    /// function is not symmetric.
    pub fn is_symmetric(&self) -> std::result::Result<BTreeMap<Partition, Q>, NotSymmetric> {
        let mut seen: BTreeMap<Partition, (Composition, Q)> = BTreeMap::new();
        for alpha in compositions(self.degree) {
            let c = self.coeff(&alpha);
            let lambda = Partition::new(alpha.clone());
            match seen.get(&lambda) {
                Some((beta, d)) if *d != c => return Err(NotSymmetric(beta.clone(), alpha)),
                Some(_) => {}
                None => {
                    seen.insert(lambda, (alpha, c));
                }
            }
        }
        Ok(seen.into_iter().filter(|(_, (_, c))| !c.is_zero()).map(|(l, (_, c))| (l, c)).collect())
    }

    /// Expansion in a symmetric basis, if the function is symmetric.
    pub fn expand(&self, basis: Basis) -> Option<BTreeMap<Partition, Q>> {
        let m = self.is_symmetric().ok()?;
        if basis == Basis::Monomial {
            return Some(m);
        }
        let parts = Partition::all(self.degree);
        // columns: m-coefficients of each basis element
        let columns: Vec<BTreeMap<Partition, Q>> = parts
            .iter()
            .map(|l| Self::basis_element(basis, l).is_symmetric().expect("symmetric basis"))
            .collect();
        let k = parts.len();
        let mut a: Vec<Vec<Q>> = parts
            .iter()
            .map(|row| {
                let mut r: Vec<Q> =
                    columns.iter().map(|c| c.get(row).cloned().unwrap_or_else(Q::zero)).collect();
                r.push(m.get(row).cloned().unwrap_or_else(Q::zero));
                r
            })
            .collect();
        let solution = solve(&mut a, k)?;
        Some(
            parts.into_iter().zip(solution).filter(|(_, c)| !c.is_zero()).collect(),
        )
    }

    /// Coefficients in the fundamental basis, keyed by rank-set bits.
    pub fn to_fundamental(&self) -> Vec<Q> {
        let n = self.degree;
        if n == 0 {
            return vec![self.coeff(&[])];
        }
        let mut d: Vec<Q> = RankSet::all(n).map(|s| self.coeff(&s.composition())).collect();
        mobius_transform(&mut d);
        d
    }

    pub fn from_fundamental(n: usize, d: &[Q]) -> Self {
        if n == 0 {
            return SymPoly::constant(d[0].clone());
        }
        let mut c = d.to_vec();
        zeta_transform(&mut c);
        let mut f = SymPoly::zero(n);
        for (bits, v) in c.into_iter().enumerate() {
            f.add_term(RankSet::from_bits(n, bits as u64).composition(), v);
        }
        f
    }

    /// The involution `L_{S,n} -> L_{complement of S, n}`.
    pub fn omega(&self) -> Self {
        let n = self.degree;
        if n == 0 {
            return self.clone();
        }
        let d = self.to_fundamental();
        let full = RankSet::full(n).bits() as usize;
        let flipped: Vec<Q> = (0..d.len()).map(|bits| d[full & !bits].clone()).collect();
        Self::from_fundamental(n, &flipped)
    }

    /// Render in the `m` basis when symmetric, otherwise in the `M` basis.
    pub fn render(&self) -> String {
        match self.is_symmetric() {
            Ok(m) => render_expansion(Basis::Monomial, &m),
            Err(_) => {
                let terms: Vec<String> = self
                    .coeffs
                    .iter()
                    .map(|(a, c)| {
                        let parts: Vec<String> = a.iter().map(ToString::to_string).collect();
                        format!("{} M[{}]", render_q(c), parts.join(","))
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ")
                }
            }
        }
    }
}

/// `c1 b[λ1] + c2 b[λ2] + ...` for a symmetric expansion.
pub fn render_expansion(basis: Basis, coeffs: &BTreeMap<Partition, Q>) -> String {
    if coeffs.is_empty() {
        return "0".into();
    }
    coeffs
        .iter()
        .rev()
        .map(|(l, c)| {
            let parts: Vec<String> = l.parts().iter().map(ToString::to_string).collect();
            format!("{} {}[{}]", render_q(c), basis.tag(), parts.join(","))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// `d_S = sum_{T <= S} (-1)^{|S - T|} c_T`, in place over bitmask indices.
fn mobius_transform(v: &mut [Q]) {
    let len = v.len();
    let mut bit = 1;
    while bit < len {
        for s in 0..len {
            if s & bit != 0 {
                let lower = v[s ^ bit].clone();
                v[s] -= lower;
            }
        }
        bit <<= 1;
    }
}

/// `c_T = sum_{S <= T} d_S`, in place.
fn zeta_transform(v: &mut [Q]) {
    let len = v.len();
    let mut bit = 1;
    while bit < len {
        for s in 0..len {
            if s & bit != 0 {
                let lower = v[s ^ bit].clone();
                v[s] += lower;
            }
        }
        bit <<= 1;
    }
}

/// Gauss-Jordan elimination on an augmented `k x (k+1)` system.
fn solve(a: &mut [Vec<Q>], k: usize) -> Option<Vec<Q>> {
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= p * &factor;
                }
            }
        }
    }
    Some(a.iter().map(|row| row[k].clone()).collect())
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Quasi-shuffles of two compositions: interleavings where a part of each may
/// be merged into one summed part.
pub fn quasi_shuffles(a: &[usize], b: &[usize]) -> Vec<Composition> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    let mut prefixed = |head: usize, tails: Vec<Composition>| {
        for t in tails {
            let mut c = Vec::with_capacity(t.len() + 1);
            c.push(head);
            c.extend(t);
            out.push(c);
        }
    };
    prefixed(a[0], quasi_shuffles(&a[1..], b));
    prefixed(b[0], quasi_shuffles(a, &b[1..]));
    prefixed(a[0] + b[0], quasi_shuffles(&a[1..], &b[1..]));
    out
}

impl Add for &SymPoly {
    type Output = SymPoly;

    fn add(self, rhs: &SymPoly) -> SymPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, rhs.degree, "adding functions of different degrees");
        let mut out = self.clone();
        for (k, v) in &rhs.coeffs {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Neg for &SymPoly {
    type Output = SymPoly;

    fn neg(self) -> SymPoly {
        self.scale(&-Q::one())
    }
}

impl Sub for &SymPoly {
    type Output = SymPoly;

    fn sub(self, rhs: &SymPoly) -> SymPoly {
        self + &(-rhs)
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;

    fn mul(self, rhs: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero(self.degree + rhs.degree);
        let mut acc: BTreeMap<Composition, Q> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &rhs.coeffs {
                let c = ca * cb;
                for gamma in quasi_shuffles(a, b) {
                    *acc.entry(gamma).or_insert_with(Q::zero) += &c;
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        out.coeffs = acc;
        out
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parse a partition written as `2,1`, `(2,1)` or `[2,1]`.
pub fn parse_partition(s: &str) -> Result<Partition> {
    let inner = s.trim().trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
    if inner.trim().is_empty() {
        return Ok(Partition::default());
    }
    let parts = inner
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad part `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
        return Err(Error::Parse(format!("`{s}` is not a weakly decreasing positive sequence")));
    }
    Ok(Partition(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec())
    }

    fn m_coeffs(f: &SymPoly) -> Vec<(Vec<usize>, Q)> {
        f.is_symmetric().unwrap().into_iter().map(|(l, c)| (l.parts().to_vec(), c)).collect()
    }

    #[test]
    fn elementary_products() {
        let e1 = SymPoly::e(1);
        assert_eq!(
            m_coeffs(&e1.pow(3)),
            vec![(vec![1, 1, 1], q(6)), (vec![2, 1], q(3)), (vec![3], q(1))]
        );
        let e2e1 = &SymPoly::e(2) * &e1;
        assert_eq!(m_coeffs(&e2e1), vec![(vec![1, 1, 1], q(3)), (vec![2, 1], q(1))]);
        assert_eq!(SymPoly::p(2), SymPoly::monomial(&part(&[2])));
    }

    #[test]
    fn fundamental_expansions() {
        let s = |n, r: &[usize]| RankSet::new(n, r).unwrap();
        let l = SymPoly::fundamental(s(2, &[]));
        assert_eq!(l.coeff(&[2]), q(1));
        assert_eq!(l.coeff(&[1, 1]), q(1));
        assert_eq!(SymPoly::fundamental(s(2, &[1])), SymPoly::monomial_qsym(&[1, 1]));
        assert_eq!(SymPoly::fundamental(s(4, &[1, 2, 3])), SymPoly::e(4));
        assert_eq!(SymPoly::fundamental(s(4, &[])), SymPoly::h(4));
    }

    #[test]
    fn omega_swaps_e_and_h() {
        for j in 1..=5 {
            assert_eq!(SymPoly::e(j).omega(), SymPoly::h(j));
            let sign = if j % 2 == 1 { q(1) } else { q(-1) };
            assert_eq!(SymPoly::p(j).omega(), SymPoly::p(j).scale(&sign));
        }
        let f = &SymPoly::e(1).pow(3) + &(&SymPoly::e(2) * &SymPoly::e(1)).scale(&q(2));
        let g = &SymPoly::h(1).pow(3) + &(&SymPoly::h(2) * &SymPoly::h(1)).scale(&q(2));
        assert_eq!(f.omega(), g);
        assert_eq!(f.omega().omega(), f);
        let qs = &SymPoly::monomial_qsym(&[2, 1, 1]) + &SymPoly::monomial_qsym(&[1, 3]);
        assert_eq!(qs.omega().omega(), qs);
    }

    #[test]
    fn symmetry_detection() {
        let err = SymPoly::monomial_qsym(&[2, 1]).is_symmetric().unwrap_err();
        assert_eq!(err, NotSymmetric(vec![1, 2], vec![2, 1]));
        assert!(SymPoly::h(3).is_symmetric().is_ok());
    }

    #[test]
    fn basis_changes() {
        let f = &SymPoly::e(1).pow(3) + &(&SymPoly::e(2) * &SymPoly::e(1)).scale(&q(2));
        let e = f.expand(Basis::Elementary).unwrap();
        assert_eq!(e.get(&part(&[1, 1, 1])), Some(&q(1)));
        assert_eq!(e.get(&part(&[2, 1])), Some(&q(2)));
        assert_eq!(e.len(), 2);
        // h_2 = (p_1^2 + p_2) / 2
        let p = SymPoly::h(2).expand(Basis::Power).unwrap();
        assert_eq!(p.get(&part(&[1, 1])), Some(&crate::arith::q_frac(1, 2)));
        assert_eq!(p.get(&part(&[2])), Some(&crate::arith::q_frac(1, 2)));
    }

    #[test]
    fn quasi_shuffle_counts() {
        // Delannoy numbers count quasi-shuffles
        assert_eq!(quasi_shuffles(&[1], &[1]).len(), 3);
        assert_eq!(quasi_shuffles(&[1, 1], &[1, 1]).len(), 13);
        assert_eq!(quasi_shuffles(&[], &[2]), vec![vec![2]]);
    }

    #[test]
    fn centralizer_orders() {
        assert_eq!(part(&[2, 1]).z(), 2);
        assert_eq!(part(&[1, 1, 1]).z(), 6);
        assert_eq!(part(&[2, 2]).z(), 8);
        assert_eq!(part(&[3]).z(), 3);
    }

    #[test]
    fn partitions() {
        assert_eq!(Partition::all(4).len(), 5);
        assert_eq!(Partition::all(8).len(), 22);
        assert_eq!(Partition::all(0), vec![Partition::default()]);
        assert_eq!(parse_partition("[2,1]").unwrap(), part(&[2, 1]));
        assert!(parse_partition("1,2").is_err());
    }
}
