use std::fmt;

use num_traits::Zero;

use super::{ElemId, IncidenceFunction, RankedPoset};
use crate::arith::Q;
use crate::error::{Error, Result};

/// A subset of `{1, ..., n-1}`, stored as a bitmask with bit `s - 1` for `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankSet {
    n: usize,
    bits: u64,
}

impl RankSet {
    pub fn empty(n: usize) -> Self {
        RankSet { n, bits: 0 }
    }

    pub fn full(n: usize) -> Self {
        RankSet { n, bits: if n == 0 { 0 } else { (1u64 << (n - 1)) - 1 } }
    }

    pub fn new(n: usize, ranks: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &s in ranks {
            if s == 0 || s >= n {
                return Err(Error::RankOutOfRange { rank: s, height: n });
            }
            bits |= 1 << (s - 1);
        }
        Ok(RankSet { n, bits })
    }

    pub fn from_bits(n: usize, bits: u64) -> Self {
        debug_assert!(bits & !RankSet::full(n).bits == 0);
        RankSet { n, bits }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn height(self) -> usize {
        self.n
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, s: usize) -> bool {
        s >= 1 && s < self.n && self.bits & (1 << (s - 1)) != 0
    }

    pub fn ranks(self) -> Vec<usize> {
        (1..self.n).filter(|&s| self.contains(s)).collect()
    }

    pub fn complement(self) -> Self {
        RankSet { n: self.n, bits: RankSet::full(self.n).bits & !self.bits }
    }

    pub fn is_subset(self, other: RankSet) -> bool {
        self.bits & !other.bits == 0
    }

    /// Every subset of `[n-1]`, in bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = RankSet> {
        let full = RankSet::full(n).bits;
        (0..=full).map(move |bits| RankSet { n, bits })
    }

    /// Subsets of `self`.
    pub fn subsets(self) -> impl Iterator<Item = RankSet> {
        let bits = self.bits;
        let n = self.n;
        // standard submask walk, ascending
        let mut sub = Some(0u64);
        std::iter::from_fn(move || {
            let cur = sub?;
            sub = if cur == bits { None } else { Some(((cur | !bits).wrapping_add(1)) & bits) };
            Some(RankSet { n, bits: cur })
        })
    }

    /// Gap composition `(s_1, s_2 - s_1, ..., n - s_k)`.
    pub fn composition(self) -> Vec<usize> {
        if self.n == 0 {
            return Vec::new();
        }
        let mut parts = Vec::new();
        let mut prev = 0;
        for s in self.ranks().into_iter().chain(std::iter::once(self.n)) {
            parts.push(s - prev);
            prev = s;
        }
        parts
    }

    /// Inverse of [`RankSet::composition`].
    pub fn from_composition(parts: &[usize]) -> Self {
        let n: usize = parts.iter().sum();
        let mut bits = 0;
        let mut acc = 0;
        for &p in &parts[..parts.len().saturating_sub(1)] {
            acc += p;
            bits |= 1 << (acc - 1);
        }
        RankSet { n, bits }
    }
}

impl fmt::Display for RankSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.ranks().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", r.join(","))
    }
}

/// Flag f-vector `alpha` and flag h-vector `beta`, indexed by rank-set bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagVectors {
    pub n: usize,
    pub alpha: Vec<u128>,
    pub beta: Vec<i128>,
}

impl FlagVectors {
    pub fn alpha(&self, s: RankSet) -> u128 {
        self.alpha[s.bits() as usize]
    }

    pub fn beta(&self, s: RankSet) -> i128 {
        self.beta[s.bits() as usize]
    }

    /// Recover alpha by summing beta over subsets.
    pub fn alpha_from_beta(&self) -> Vec<i128> {
        RankSet::all(self.n)
            .map(|s| s.subsets().map(|t| self.beta(t)).sum())
            .collect()
    }
}

/// Inclusion-exclusion `beta(S) = sum_{T <= S} (-1)^{|S - T|} alpha(T)`.
pub fn beta_from_alpha(n: usize, alpha: &[u128]) -> Vec<i128> {
    RankSet::all(n)
        .map(|s| {
            s.subsets()
                .map(|t| {
                    let a = alpha[t.bits() as usize] as i128;
                    if (s.len() - t.len()) % 2 == 0 {
                        a
                    } else {
                        -a
                    }
                })
                .sum()
        })
        .collect()
}

impl<T> RankedPoset<T> {
    fn check_rank_set(&self, s: RankSet) -> Result<()> {
        if s.height() != self.height() {
            return Err(Error::RankOutOfRange { rank: s.height(), height: self.height() });
        }
        Ok(())
    }

    /// Chains `0 < t_1 < ... < t_k < 1` with rank set exactly `S`, counted by
    /// pushing a vector of partial counts from one selected rank to the next.
    pub fn alpha(&self, s: RankSet) -> Result<u128> {
        self.check_rank_set(s)?;
        let mut current: Vec<(ElemId, u128)> = vec![(self.bottom(), 1)];
        for r in s.ranks().into_iter().chain(std::iter::once(self.height())) {
            let next: Vec<(ElemId, u128)> = self
                .layer(r)
                .iter()
                .map(|&t| {
                    let c = current.iter().filter(|&&(u, _)| self.leq(u, t)).map(|&(_, c)| c).sum();
                    (t, c)
                })
                .filter(|&(_, c)| c > 0)
                .collect();
            current = next;
        }
        Ok(current.iter().map(|&(_, c)| c).sum())
    }

    pub fn beta(&self, s: RankSet) -> Result<i128> {
        self.check_rank_set(s)?;
        let mut total = 0i128;
        for t in s.subsets() {
            let a = self.alpha(t)? as i128;
            total += if (s.len() - t.len()).is_multiple_of(2) { a } else { -a };
        }
        Ok(total)
    }

    pub fn flag_vectors(&self) -> FlagVectors {
        let n = self.height();
        let alpha: Vec<u128> =
            RankSet::all(n).map(|s| self.alpha(s).expect("rank set in range")).collect();
        let beta = beta_from_alpha(n, &alpha);
        FlagVectors { n, alpha, beta }
    }

    /// `alpha(phi, S)`: chains with rank set `S`, each weighted by the product
    /// of `phi` over its consecutive pairs (including `0` and `1`).
    pub fn alpha_weighted(&self, phi: &IncidenceFunction, s: RankSet) -> Result<Q> {
        self.check_rank_set(s)?;
        let mut current: Vec<(ElemId, Q)> = vec![(self.bottom(), Q::from_integer(1.into()))];
        for r in s.ranks().into_iter().chain(std::iter::once(self.height())) {
            let mut next = Vec::new();
            for &t in self.layer(r) {
                let mut acc = Q::zero();
                for (u, c) in &current {
                    if self.leq(*u, t) {
                        acc += c * phi.get(*u, t);
                    }
                }
                if !acc.is_zero() {
                    next.push((t, acc));
                }
            }
            current = next;
        }
        Ok(current.into_iter().map(|(_, c)| c).fold(Q::zero(), |a, b| a + b))
    }
}
