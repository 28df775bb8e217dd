use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{binomial, multinomial};
use crate::error::{Error, Result};
use crate::shuffle::ShufflePoset;
use crate::word::{interval_decomposition, ShuffleContext, ShuffleWord};

/// Factor multiplicities of `[0, w]` (`lower`) and `[w, 1]` (`upper`),
/// keyed by the factor shape `(i, j)` of `W_{i,j}`; `(0, 0)` factors are
/// counted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ShuffleType {
    #[serde(serialize_with = "shape_keys")]
    pub lower: BTreeMap<(usize, usize), usize>,
    #[serde(serialize_with = "shape_keys")]
    pub upper: BTreeMap<(usize, usize), usize>,
}

fn shape_keys<S: Serializer>(
    map: &BTreeMap<(usize, usize), usize>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_map(map.iter().map(|((i, j), k)| (format!("{i},{j}"), k)))
}

impl ShuffleType {
    fn sum<F: Fn(usize, usize, usize) -> usize>(map: &BTreeMap<(usize, usize), usize>, f: F) -> usize {
        map.iter().map(|(&(i, j), &k)| f(i, j, k)).sum()
    }

    /// Number of lower letters of the word.
    pub fn m(&self) -> usize {
        Self::sum(&self.upper, |i, _, k| i * k)
    }

    /// Number of upper letters of the word.
    pub fn n(&self) -> usize {
        Self::sum(&self.lower, |_, j, k| j * k)
    }

    /// Size of the lower alphabet of the ambient poset.
    pub fn big_m(&self) -> usize {
        Self::sum(&self.lower, |i, _, k| i * k) + self.m()
    }

    pub fn big_n(&self) -> usize {
        Self::sum(&self.upper, |_, j, k| j * k) + self.n()
    }

    /// Number of maximal runs of upper letters.
    pub fn r(&self) -> usize {
        Self::sum(&self.lower, |_, j, k| if j != 0 { k } else { 0 })
    }

    /// Number of maximal runs of lower letters.
    pub fn s(&self) -> usize {
        Self::sum(&self.upper, |i, _, k| if i != 0 { k } else { 0 })
    }

    pub fn epsilon(&self) -> i64 {
        self.r() as i64 - self.s() as i64
    }

    /// `1 + sum i b_ij = sum a_ij`, `1 + sum j a_ij = sum b_ij`, and
    /// `|r - s| <= 1`.
    pub fn check(&self) -> Result<()> {
        let total = |map: &BTreeMap<(usize, usize), usize>| map.values().sum::<usize>();
        if 1 + self.m() != total(&self.lower) {
            return Err(Error::InconsistentType(format!(
                "{} lower factors but {} lower letters",
                total(&self.lower),
                self.m()
            )));
        }
        if 1 + self.n() != total(&self.upper) {
            return Err(Error::InconsistentType(format!(
                "{} upper factors but {} upper letters",
                total(&self.upper),
                self.n()
            )));
        }
        if self.epsilon().abs() > 1 {
            return Err(Error::InconsistentType(format!(
                "runs differ by {}",
                self.epsilon()
            )));
        }
        Ok(())
    }
}

pub fn type_of(w: &ShuffleWord, ctx: ShuffleContext) -> Result<ShuffleType> {
    let t = ShuffleType {
        lower: interval_decomposition(&ctx.bottom(), w, ctx)?.multiplicities(),
        upper: interval_decomposition(w, &ctx.top(), ctx)?.multiplicities(),
    };
    t.check()?;
    debug_assert_eq!((t.big_m(), t.big_n()), (ctx.lower as usize, ctx.upper as usize));
    Ok(t)
}

/// Number of words with the given type, in the poset the type determines.
pub fn count_by_type(t: &ShuffleType) -> Result<u128> {
    t.check()?;
    let (m, n, r, s) = (t.m(), t.n(), t.r(), t.s());
    if r + s == 0 {
        return Ok(1);
    }
    let eps = t.epsilon();
    let a: Vec<usize> = t.lower.values().copied().collect();
    let b: Vec<usize> = t.upper.values().copied().collect();
    let num = (2 - (eps * eps) as u128) * multinomial(m + 1, &a) * multinomial(n + 1, &b);
    let den = binomial(m + 1, r) * binomial(n + 1, s);
    if den == 0 || !num.is_multiple_of(den) {
        return Err(Error::InconsistentType(format!("{num}/{den} is not an integer")));
    }
    Ok(num / den)
}

/// Census of the elements of `W_{M,N}` by type.
pub fn classify_elements(lower: u16, upper: u16) -> Result<BTreeMap<ShuffleType, u128>> {
    let p = ShufflePoset::with_sizes(lower, upper);
    let ctx = p.context();
    let types = p
        .poset()
        .elements()
        .par_iter()
        .map(|w| type_of(w, ctx))
        .collect::<Result<Vec<_>>>()?;
    let mut census = BTreeMap::new();
    for t in types {
        *census.entry(t).or_insert(0) += 1;
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ShuffleWord {
        ShuffleWord::parse(s).unwrap()
    }

    fn map(entries: &[((usize, usize), usize)]) -> BTreeMap<(usize, usize), usize> {
        entries.iter().copied().collect()
    }

    #[test]
    fn types_of_examples() {
        let ctx = ShuffleContext::new(1, 1);
        let t = type_of(&ShuffleWord::empty(), ctx).unwrap();
        assert_eq!(t.lower, map(&[((1, 0), 1)]));
        assert_eq!(t.upper, map(&[((0, 1), 1)]));
        assert_eq!((t.m(), t.n(), t.r(), t.s()), (0, 0, 0, 0));

        let t = type_of(&w("x1 a1"), ctx).unwrap();
        assert_eq!(t.lower, map(&[((0, 1), 1), ((0, 0), 1)]));
        assert_eq!(t.upper, map(&[((1, 0), 1), ((0, 0), 1)]));
        assert_eq!((t.m(), t.n(), t.r(), t.s(), t.epsilon()), (1, 1, 1, 1, 0));
        assert_eq!(count_by_type(&t).unwrap(), 2);

        let t = type_of(&w("a2"), ShuffleContext::new(2, 0)).unwrap();
        assert_eq!(t.lower, map(&[((1, 0), 1), ((0, 0), 1)]));
        assert_eq!(t.upper, map(&[((1, 0), 1)]));
        assert_eq!((t.m(), t.n(), t.r(), t.s(), t.epsilon()), (1, 0, 0, 1, -1));
        assert_eq!((t.big_m(), t.big_n()), (2, 0));
        assert_eq!(count_by_type(&t).unwrap(), 2);
    }

    #[test]
    fn census_of_small_posets() {
        let c = classify_elements(1, 1).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c.values().sum::<u128>(), 5);
        let c = classify_elements(2, 0).unwrap();
        let mut counts: Vec<u128> = c.values().copied().collect();
        counts.sort();
        assert_eq!(counts, vec![1, 1, 2]);
        let c = classify_elements(0, 0).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.values().next(), Some(&1));
    }

    #[test]
    fn formula_matches_census() {
        for (m, n) in [(2, 1), (1, 2), (2, 2), (3, 1), (0, 3)] {
            for (t, count) in classify_elements(m, n).unwrap() {
                assert_eq!(count_by_type(&t).unwrap(), count, "{t:?}");
            }
        }
    }

    #[test]
    fn inconsistent_types_are_rejected() {
        let t = ShuffleType { lower: map(&[((1, 0), 2)]), upper: map(&[((0, 1), 1)]) };
        assert!(matches!(count_by_type(&t), Err(Error::InconsistentType(_))));
    }

    #[test]
    fn json_keys() {
        let t = type_of(&ShuffleWord::empty(), ShuffleContext::new(1, 1)).unwrap();
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"lower":{"1,0":1},"upper":{"0,1":1}}"#
        );
    }
}
