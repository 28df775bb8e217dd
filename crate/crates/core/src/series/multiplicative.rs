use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::BivariateSeries;
use crate::arith::{binomial, parse_q, q, q_frac, render_q, Q};
use crate::error::{Error, Result};
use crate::shuffle::ShufflePoset;
use crate::word::interval_decomposition;

/// A function on the intervals of the infinite shuffle poset that is the
/// product of its values `f_ij` on the canonical factors `W_{i,j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativeFunction {
    table: BivariateSeries,
}

impl MultiplicativeFunction {
    /// Requires `f_00 = 1`.
    pub fn new(table: BivariateSeries) -> Result<Self> {
        if !table.coeff(0, 0).is_one() {
            return Err(Error::Invariant(format!(
                "value on the one-element interval is {}, not 1",
                render_q(table.coeff(0, 0))
            )));
        }
        Ok(MultiplicativeFunction { table })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Q>(trunc: (usize, usize), f: F) -> Result<Self> {
        Self::new(BivariateSeries::from_fn(trunc, f))
    }

    pub fn zeta(trunc: (usize, usize)) -> Self {
        MultiplicativeFunction { table: BivariateSeries::geometric(trunc, &Q::one(), &Q::one()) }
    }

    /// `mu_ij = (-1)^{i+j} C(i+j, i)`.
    pub fn mu(trunc: (usize, usize)) -> Self {
        let table = BivariateSeries::from_fn(trunc, |i, j| {
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            q(sign) * Q::from_integer(binomial(i + j, i).into())
        });
        MultiplicativeFunction { table }
    }

    pub fn delta(trunc: (usize, usize)) -> Self {
        MultiplicativeFunction { table: BivariateSeries::one(trunc) }
    }

    /// Values `p/d` with `|p| <= 6`, `1 <= d <= 4`, from a seeded stream.
    pub fn random(trunc: (usize, usize), seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = BivariateSeries::from_fn(trunc, |i, j| {
            let (p, d) = (rng.gen_range(-6..=6), rng.gen_range(1..=4));
            if (i, j) == (0, 0) { Q::one() } else { q_frac(p, d) }
        });
        MultiplicativeFunction { table }
    }

    pub fn truncation(&self) -> (usize, usize) {
        self.table.truncation()
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        self.table.coeff(i, j)
    }

    pub fn series(&self) -> &BivariateSeries {
        &self.table
    }

    /// Product of the values on the given factor shapes.
    pub fn on_factors(&self, factors: &[(usize, usize)]) -> Q {
        factors.iter().fold(Q::one(), |acc, &(i, j)| acc * self.get(i, j))
    }

    /// `{"trunc": [Tx, Ty], "values": {"i,j": "p/q"}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let (tx, ty) = self.truncation();
        let mut values = serde_json::Map::new();
        for i in 0..=tx {
            for j in 0..=ty {
                values.insert(format!("{i},{j}"), render_q(self.get(i, j)).into());
            }
        }
        serde_json::json!({ "trunc": [tx, ty], "values": values })
    }

    /// Inverse of [`to_json`](Self::to_json). Entries that are absent are zero.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("multiplicative table: {what}"));
        let trunc = v.get("trunc").and_then(|t| t.as_array()).ok_or_else(|| bad("missing trunc"))?;
        let [tx, ty] = trunc.as_slice() else {
            return Err(bad("trunc must have two entries"));
        };
        let (tx, ty) = (
            tx.as_u64().ok_or_else(|| bad("trunc entries must be integers"))? as usize,
            ty.as_u64().ok_or_else(|| bad("trunc entries must be integers"))? as usize,
        );
        let values = v.get("values").and_then(|t| t.as_object()).ok_or_else(|| bad("missing values"))?;
        let mut parsed: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (key, value) in values {
            let (i, j) = key
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)))
                .ok_or_else(|| bad(&format!("key `{key}`")))?;
            if i > tx || j > ty {
                return Err(bad(&format!("key `{key}` outside the truncation")));
            }
            let c = match value {
                serde_json::Value::String(s) => parse_q(s),
                serde_json::Value::Number(n) => n.as_i64().map(q),
                _ => None,
            }
            .ok_or_else(|| bad(&format!("value at `{key}`")))?;
            parsed.insert((i, j), c);
        }
        Self::from_fn((tx, ty), |i, j| parsed.get(&(i, j)).cloned().unwrap_or_else(Q::zero))
    }
}

/// `(f * g)_{M,N} = sum_w f([0, w]) g([w, 1])` over the elements of `W_{M,N}`.
pub fn convolve_direct(
    f: &MultiplicativeFunction,
    g: &MultiplicativeFunction,
    lower: u16,
    upper: u16,
) -> Result<Q> {
    for t in [f.truncation(), g.truncation()] {
        if t.0 < lower as usize || t.1 < upper as usize {
            return Err(Error::TruncationMismatch(t, (lower as usize, upper as usize)));
        }
    }
    let p = ShufflePoset::with_sizes(lower, upper);
    let ctx = p.context();
    let terms = p
        .poset()
        .elements()
        .par_iter()
        .map(|w| {
            let below = interval_decomposition(&ctx.bottom(), w, ctx)?;
            let above = interval_decomposition(w, &ctx.top(), ctx)?;
            Ok(f.on_factors(below.factors()) * g.on_factors(above.factors()))
        })
        .collect::<Result<Vec<Q>>>()?;
    Ok(terms.into_iter().fold(Q::zero(), |a, b| a + b))
}

/// `1/(F*G) = 1/(F~ G_0) + 1/(F_0 G~) - 1/(F_0 G_0)` with `F_0 = F(x,0)`,
/// `G_0 = G(0,y)`, `F~ = F(x, G_0 y)`, `G~ = G(F_0 x, y)`.
pub fn convolve_closed_form(f: &BivariateSeries, g: &BivariateSeries) -> Result<BivariateSeries> {
    for s in [f, g] {
        if !s.coeff(0, 0).is_one() {
            return Err(Error::Invariant(format!(
                "constant term {} is not 1",
                render_q(s.coeff(0, 0))
            )));
        }
    }
    let f0 = f.restrict_x();
    let g0 = g.restrict_y();
    let f_tilde = f.substitute_y(&g0)?;
    let g_tilde = g.substitute_x(&f0)?;
    let a = f_tilde.mul(&g0)?.reciprocal()?;
    let b = f0.mul(&g_tilde)?.reciprocal()?;
    let c = f0.mul(&g0)?.reciprocal()?;
    a.add(&b)?.sub(&c)?.reciprocal()
}

/// `1 / (1 - (sum a_i) x - (sum b_i) y + (sum (a_1 + ... + a_i) b_i) x y)`.
pub fn product_identity(a: &[Q], b: &[Q], trunc: (usize, usize)) -> Result<BivariateSeries> {
    if a.len() != b.len() {
        return Err(Error::Invariant(format!("{} x-parameters but {} y-parameters", a.len(), b.len())));
    }
    let sum_a: Q = a.iter().sum();
    let sum_b: Q = b.iter().sum();
    let mut prefix = Q::zero();
    let mut cross = Q::zero();
    for (ai, bi) in a.iter().zip(b) {
        prefix += ai;
        cross += &prefix * bi;
    }
    BivariateSeries::polynomial(trunc, &[(0, 0, Q::one()), (1, 0, -sum_a), (0, 1, -sum_b), (1, 1, cross)])
        .reciprocal()
}

/// `sum Z_ij(k) x^i y^j = 1 / (1 - k x - k y + C(k+1, 2) x y)`, for any
/// integer `k`.
pub fn zeta_polynomial_gf(k: i64, trunc: (usize, usize)) -> BivariateSeries {
    let kq = q(k);
    BivariateSeries::polynomial(
        trunc,
        &[(0, 0, Q::one()), (1, 0, -kq.clone()), (0, 1, -kq), (1, 1, q(k * (k + 1) / 2))],
    )
    .reciprocal()
    .expect("constant term is 1")
}

/// `zeta^k(0, 1)` on `W_{M,N}`; negative `k` uses powers of the Moebius function.
pub fn zeta_values(lower: u16, upper: u16, k: i64) -> Q {
    ShufflePoset::with_sizes(lower, upper).poset().zeta_power(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: (usize, usize) = (6, 6);

    #[test]
    fn direct_convolution_basics() {
        let (z, m) = (MultiplicativeFunction::zeta(T), MultiplicativeFunction::mu(T));
        assert_eq!(convolve_direct(&z, &z, 1, 1).unwrap(), q(5));
        assert_eq!(convolve_direct(&z, &z, 0, 0).unwrap(), q(1));
        for (a, b) in [(1, 0), (0, 1), (1, 1), (2, 1), (2, 2), (1, 3)] {
            assert_eq!(convolve_direct(&m, &z, a, b).unwrap(), q(0));
            assert_eq!(convolve_direct(&z, &m, a, b).unwrap(), q(0));
        }
        let small = MultiplicativeFunction::zeta((1, 1));
        assert!(convolve_direct(&small, &small, 2, 0).is_err());
    }

    #[test]
    fn closed_form_of_zeta_squared() {
        let z = MultiplicativeFunction::zeta(T);
        let zz = convolve_closed_form(z.series(), z.series()).unwrap();
        let expected = product_identity(&[q(1), q(1)], &[q(1), q(1)], T).unwrap();
        assert_eq!(zz, expected);
        assert_eq!(zz.coeff(1, 1), &q(5));
        assert_eq!(zz, zeta_polynomial_gf(2, T));
    }

    #[test]
    fn delta_is_neutral() {
        let f = MultiplicativeFunction::random(T, 7);
        let d = MultiplicativeFunction::delta(T);
        assert_eq!(&convolve_closed_form(f.series(), d.series()).unwrap(), f.series());
        assert_eq!(&convolve_closed_form(d.series(), f.series()).unwrap(), f.series());
    }

    #[test]
    fn closed_form_matches_direct_on_random_tables() {
        for seed in 0..3 {
            let f = MultiplicativeFunction::random(T, seed);
            let g = MultiplicativeFunction::random(T, seed + 100);
            let fg = convolve_closed_form(f.series(), g.series()).unwrap();
            for (a, b) in [(1, 0), (0, 2), (1, 1), (2, 1), (1, 2), (2, 2)] {
                let direct = convolve_direct(&f, &g, a, b).unwrap();
                assert_eq!(fg.coeff(a as usize, b as usize), &direct, "seed {seed} at ({a},{b})");
            }
        }
    }

    #[test]
    fn zeta_polynomial_values() {
        for k in -1..=4i64 {
            let gf = zeta_polynomial_gf(k, (2, 2));
            assert_eq!(gf.coeff(1, 1), &q((3 * k * k - k) / 2));
            assert_eq!(gf.coeff(1, 1), &zeta_values(1, 1, k));
        }
        assert_eq!(zeta_values(1, 1, -1), q(2));
        assert_eq!(zeta_polynomial_gf(1, T), BivariateSeries::geometric(T, &q(1), &q(1)));
    }

    #[test]
    fn product_identity_small_cases() {
        let one = |n| vec![q(1); n];
        assert_eq!(
            product_identity(&one(1), &one(1), T).unwrap(),
            BivariateSeries::geometric(T, &q(1), &q(1))
        );
        let three = product_identity(&one(3), &one(3), T).unwrap();
        assert_eq!(three.coeff(1, 1), &q(12));
        assert!(product_identity(&one(1), &one(2), T).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = MultiplicativeFunction::random((2, 3), 11);
        let back = MultiplicativeFunction::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let v = serde_json::json!({"trunc": [1, 1], "values": {"0,0": "1", "1,1": "-2/3"}});
        let g = MultiplicativeFunction::from_json(&v).unwrap();
        assert_eq!(g.get(1, 1), &q_frac(-2, 3));
        assert_eq!(g.get(1, 0), &q(0));
        let v = serde_json::json!({"trunc": [1, 1], "values": {"0,0": "2"}});
        assert!(MultiplicativeFunction::from_json(&v).is_err());
        let v = serde_json::json!({"trunc": [1, 1], "values": {"2,0": "1"}});
        assert!(MultiplicativeFunction::from_json(&v).is_err());
    }
}
