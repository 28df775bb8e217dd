//! Exact integer and rational helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Exact rational used for every coefficient in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_from_u128(n: u128) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_from_i128(n: i128) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `total! / prod(parts!)`; zero when the parts do not sum to `total`.
pub fn multinomial(total: usize, parts: &[usize]) -> u128 {
    if parts.iter().sum::<usize>() != total {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut used = 0;
    for &p in parts {
        used += p;
        acc *= binomial(used, p);
    }
    acc
}

/// Render a rational as `p/q` (or `p` when integral).
pub fn render_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}
