use num_traits::{One, Zero};

use super::{ElemId, RankedPoset};
use crate::arith::Q;
use crate::error::{Error, Result};

/// An element of the incidence algebra: a rational value on every pair
/// `u <= v`. Rows are keyed by `u` and sorted by `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceFunction {
    rows: Vec<Vec<(ElemId, Q)>>,
}

impl IncidenceFunction {
    /// Tabulate `f` on every comparable pair of `p`.
    pub fn from_fn<T, F: FnMut(ElemId, ElemId) -> Q>(p: &RankedPoset<T>, mut f: F) -> Self {
        let rows = (0..p.len())
            .map(|u| p.upset(u).map(|v| (v, f(u, v))).collect())
            .collect();
        IncidenceFunction { rows }
    }

    pub fn zeta<T>(p: &RankedPoset<T>) -> Self {
        Self::from_fn(p, |_, _| Q::one())
    }

    pub fn delta<T>(p: &RankedPoset<T>) -> Self {
        Self::from_fn(p, |u, v| if u == v { Q::one() } else { Q::zero() })
    }

    /// Moebius function, from `mu(u,u) = 1` and `mu(u,v) = -sum_{u<=t<v} mu(u,t)`.
    pub fn mobius<T>(p: &RankedPoset<T>) -> Self {
        let rows = (0..p.len())
            .map(|u| {
                mobius_row(p, u).into_iter().map(|(v, m)| (v, Q::from_integer(m.into()))).collect()
            })
            .collect();
        IncidenceFunction { rows }
    }

    /// Value at `(u, v)`; zero when `u` is not below `v`.
    pub fn get(&self, u: ElemId, v: ElemId) -> Q {
        let row = &self.rows[u];
        match row.binary_search_by_key(&v, |(w, _)| *w) {
            Ok(i) => row[i].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn row(&self, u: ElemId) -> &[(ElemId, Q)] {
        &self.rows[u]
    }

    /// `(f * g)(u, v) = sum_{u <= t <= v} f(u, t) g(t, v)`.
    pub fn convolve<T>(&self, g: &IncidenceFunction, p: &RankedPoset<T>) -> IncidenceFunction {
        let rows = (0..p.len())
            .map(|u| {
                let mut acc: Vec<Q> = vec![Q::zero(); p.len()];
                for (t, fut) in &self.rows[u] {
                    if fut.is_zero() {
                        continue;
                    }
                    for (v, gtv) in &g.rows[*t] {
                        acc[*v] += fut * gtv;
                    }
                }
                p.upset(u).map(|v| (v, std::mem::take(&mut acc[v]))).collect()
            })
            .collect();
        IncidenceFunction { rows }
    }
}

/// `mu(u, v)` for every `v >= u`, in rank order.
pub(crate) fn mobius_row<T>(p: &RankedPoset<T>, u: ElemId) -> Vec<(ElemId, i64)> {
    let ups: Vec<ElemId> = p.upset(u).collect();
    let mut out: Vec<(ElemId, i64)> = Vec::with_capacity(ups.len());
    for &v in &ups {
        let value = if v == u {
            1
        } else {
            -out.iter().filter(|&&(t, _)| p.leq(t, v)).map(|&(_, m)| m).sum::<i64>()
        };
        out.push((v, value));
    }
    out
}

impl<T> RankedPoset<T> {
    pub fn mobius(&self, u: ElemId, v: ElemId) -> Result<i64> {
        if !self.leq(u, v) {
            return Err(Error::NotComparable(u.to_string(), v.to_string()));
        }
        Ok(mobius_row(self, u).into_iter().find(|&(t, _)| t == v).map(|(_, m)| m).unwrap())
    }

    /// `zeta^k(0, 1)`. Negative powers are powers of the Moebius function.
    /// Only the row of the bottom element is propagated.
    pub fn zeta_power(&self, k: i64) -> Q {
        let mu = (k < 0).then(|| IncidenceFunction::mobius(self));
        let mut row: Vec<Q> = vec![Q::zero(); self.len()];
        row[self.bottom()] = Q::one();
        for _ in 0..k.unsigned_abs() {
            let mut next = vec![Q::zero(); self.len()];
            for (t, rt) in row.iter().enumerate() {
                if rt.is_zero() {
                    continue;
                }
                match &mu {
                    Some(mu) => {
                        for (v, m) in mu.row(t) {
                            next[*v] += rt * m;
                        }
                    }
                    None => {
                        for v in self.upset(t) {
                            next[v] += rt;
                        }
                    }
                }
            }
            row = next;
        }
        row[self.top()].clone()
    }
}
