//! Shuffle words over a lower alphabet `a_1 < a_2 < ...` and an upper
//! alphabet `x_1 < x_2 < ...`, with the cover relation of the poset of
//! shuffles and the product decomposition of its intervals.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter of either alphabet. The derived order is the label order used
/// throughout: every lower letter precedes every upper letter, and letters
/// of one alphabet are ordered by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Lower(u16),
    Upper(u16),
}

impl Letter {
    pub fn index(self) -> u16 {
        match self {
            Letter::Lower(i) | Letter::Upper(i) => i,
        }
    }

    pub fn is_lower(self) -> bool {
        matches!(self, Letter::Lower(_))
    }

    pub fn is_upper(self) -> bool {
        matches!(self, Letter::Upper(_))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Lower(i) => write!(f, "a{i}"),
            Letter::Upper(i) => write!(f, "x{i}"),
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = s.split_at(s.len().min(1));
        let index: u16 = tail.parse().map_err(|_| Error::BadLetter(s.to_string()))?;
        if index == 0 {
            return Err(Error::BadLetter(s.to_string()));
        }
        match head {
            "a" => Ok(Letter::Lower(index)),
            "x" => Ok(Letter::Upper(index)),
            _ => Err(Error::BadLetter(s.to_string())),
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sizes of the two alphabets, `M` lower letters and `N` upper letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShuffleContext {
    pub lower: u16,
    pub upper: u16,
}

impl ShuffleContext {
    pub fn new(lower: u16, upper: u16) -> Self {
        ShuffleContext { lower, upper }
    }

    /// Rank of the top element, `M + N`.
    pub fn height(self) -> usize {
        self.lower as usize + self.upper as usize
    }

    pub fn bottom(self) -> ShuffleWord {
        ShuffleWord((1..=self.lower).map(Letter::Lower).collect())
    }

    pub fn top(self) -> ShuffleWord {
        ShuffleWord((1..=self.upper).map(Letter::Upper).collect())
    }

    pub fn admits(self, letter: Letter) -> bool {
        match letter {
            Letter::Lower(i) => i >= 1 && i <= self.lower,
            Letter::Upper(j) => j >= 1 && j <= self.upper,
        }
    }
}

/// True iff `seq` has distinct letters, each alphabet appears in increasing
/// index order, and every letter lies in the context's alphabets.
pub fn is_valid_shuffle(seq: &[Letter], ctx: ShuffleContext) -> bool {
    seq.iter().all(|&l| ctx.admits(l)) && satisfies_shuffle_property(seq)
}

fn satisfies_shuffle_property(seq: &[Letter]) -> bool {
    let mut last_lower = 0u16;
    let mut last_upper = 0u16;
    for &l in seq {
        match l {
            Letter::Lower(i) => {
                if i <= last_lower || i == 0 {
                    return false;
                }
                last_lower = i;
            }
            Letter::Upper(j) => {
                if j <= last_upper || j == 0 {
                    return false;
                }
                last_upper = j;
            }
        }
    }
    true
}

/// A word with the shuffle property. Distinctness of letters follows from
/// strict increase within each alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShuffleWord(Vec<Letter>);

impl ShuffleWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if satisfies_shuffle_property(&letters) {
            Ok(ShuffleWord(letters))
        } else {
            Err(Error::InvalidWord(render_letters(&letters)))
        }
    }

    pub fn empty() -> Self {
        ShuffleWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, letter: Letter) -> bool {
        self.0.contains(&letter)
    }

    pub fn position(&self, letter: Letter) -> Option<usize> {
        self.0.iter().position(|&l| l == letter)
    }

    pub fn lower_count(&self) -> usize {
        self.0.iter().filter(|l| l.is_lower()).count()
    }

    pub fn upper_count(&self) -> usize {
        self.0.iter().filter(|l| l.is_upper()).count()
    }

    pub fn is_valid_in(&self, ctx: ShuffleContext) -> bool {
        self.0.iter().all(|&l| ctx.admits(l))
    }

    fn check(&self, ctx: ShuffleContext) -> Result<()> {
        if self.is_valid_in(ctx) {
            Ok(())
        } else {
            Err(Error::InvalidWord(format!(
                "{self} is not a word of W({},{})",
                ctx.lower, ctx.upper
            )))
        }
    }

    /// Word with `letter` removed; the result always keeps the shuffle property.
    pub fn without(&self, letter: Letter) -> ShuffleWord {
        ShuffleWord(self.0.iter().copied().filter(|&l| l != letter).collect())
    }

    /// Word with `letter` inserted before position `pos`, if that keeps the
    /// shuffle property and the letter is new.
    pub fn with_inserted(&self, pos: usize, letter: Letter) -> Option<ShuffleWord> {
        if pos > self.0.len() || self.contains(letter) {
            return None;
        }
        let mut v = self.0.clone();
        v.insert(pos, letter);
        satisfies_shuffle_property(&v).then_some(ShuffleWord(v))
    }

    /// Admissible insertion positions for an upper letter `x_t` not in the word:
    /// after every smaller upper letter and before every larger one.
    pub fn insertion_range(&self, letter: Letter) -> std::ops::RangeInclusive<usize> {
        let same = |l: &Letter| l.is_lower() == letter.is_lower();
        let lo = self
            .0
            .iter()
            .rposition(|l| same(l) && l.index() < letter.index())
            .map_or(0, |p| p + 1);
        let hi = self
            .0
            .iter()
            .position(|l| same(l) && l.index() > letter.index())
            .unwrap_or(self.0.len());
        lo..=hi
    }

    /// Parse the canonical space-separated rendering, e.g. `"x2 a1 a3 x3"`.
    /// The empty string (or `"∅"`) is the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(ShuffleWord::empty());
        }
        let letters = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Letter>>>()?;
        ShuffleWord::new(letters)
    }

    /// Tokens of the canonical rendering (`["a1", "x2"]`).
    pub fn tokens(&self) -> Vec<String> {
        self.0.iter().map(ToString::to_string).collect()
    }
}

fn render_letters(letters: &[Letter]) -> String {
    letters.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for ShuffleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("∅")
        } else {
            f.write_str(&render_letters(&self.0))
        }
    }
}

impl Serialize for ShuffleWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ShuffleWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letters = Vec::<Letter>::deserialize(d)?;
        ShuffleWord::new(letters).map_err(serde::de::Error::custom)
    }
}

/// `rho(w) = (M - #lower letters) + #upper letters`.
pub fn rank(w: &ShuffleWord, ctx: ShuffleContext) -> Result<usize> {
    w.check(ctx)?;
    Ok(ctx.lower as usize - w.lower_count() + w.upper_count())
}

/// All `w'` covering `w`: delete one lower letter, or insert one unused
/// upper letter at an admissible position.
pub fn upper_covers(w: &ShuffleWord, ctx: ShuffleContext) -> Vec<ShuffleWord> {
    let mut out = Vec::new();
    for &l in w.letters() {
        if l.is_lower() {
            out.push(w.without(l));
        }
    }
    for t in 1..=ctx.upper {
        let x = Letter::Upper(t);
        if w.contains(x) {
            continue;
        }
        for pos in w.insertion_range(x) {
            let mut v = w.0.clone();
            v.insert(pos, x);
            out.push(ShuffleWord(v));
        }
    }
    out
}

/// All words covered by `w`: delete one upper letter, or insert one unused
/// lower letter at an admissible position.
pub fn lower_covers(w: &ShuffleWord, ctx: ShuffleContext) -> Vec<ShuffleWord> {
    let mut out = Vec::new();
    for &l in w.letters() {
        if l.is_upper() {
            out.push(w.without(l));
        }
    }
    for i in 1..=ctx.lower {
        let a = Letter::Lower(i);
        if w.contains(a) {
            continue;
        }
        for pos in w.insertion_range(a) {
            let mut v = w.0.clone();
            v.insert(pos, a);
            out.push(ShuffleWord(v));
        }
    }
    out
}

/// Order test by the common-subword criterion: the letters shared by `u` and
/// `v` occur in the same relative order, letters only in `u` are lower, and
/// letters only in `v` are upper.
pub fn leq(u: &ShuffleWord, v: &ShuffleWord) -> bool {
    let in_u: HashSet<Letter> = u.0.iter().copied().collect();
    let in_v: HashSet<Letter> = v.0.iter().copied().collect();
    if u.0.iter().any(|l| !in_v.contains(l) && l.is_upper()) {
        return false;
    }
    if v.0.iter().any(|l| !in_u.contains(l) && l.is_lower()) {
        return false;
    }
    let cu = u.0.iter().filter(|l| in_v.contains(l));
    let cv = v.0.iter().filter(|l| in_u.contains(l));
    cu.eq(cv)
}

/// Factor dimensions of an interval `[u, v]`, one `(i, j)` per gap between
/// consecutive common letters (sentinels included), so `W_{0,0}` factors are
/// kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalFactorization {
    factors: Vec<(usize, usize)>,
}

impl IntervalFactorization {
    pub fn factors(&self) -> &[(usize, usize)] {
        &self.factors
    }

    /// The multiset with `(0, 0)` factors dropped, sorted.
    pub fn canonical(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.factors.iter().copied().filter(|&f| f != (0, 0)).collect();
        v.sort_unstable();
        v
    }

    /// Multiplicity of each factor shape, zeros included.
    pub fn multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for &f in &self.factors {
            *m.entry(f).or_insert(0) += 1;
        }
        m
    }
}

pub fn interval_decomposition(
    u: &ShuffleWord,
    v: &ShuffleWord,
    ctx: ShuffleContext,
) -> Result<IntervalFactorization> {
    u.check(ctx)?;
    v.check(ctx)?;
    if !leq(u, v) {
        return Err(Error::NotComparable(u.to_string(), v.to_string()));
    }
    let in_v: HashSet<Letter> = v.0.iter().copied().collect();
    // 1-based positions of common letters in u and in v
    let pu: Vec<usize> = (0..u.len()).filter(|&p| in_v.contains(&u.0[p])).map(|p| p + 1).collect();
    let pv: Vec<usize> = pu
        .iter()
        .map(|&p| v.position(u.0[p - 1]).expect("common letter") + 1)
        .collect();
    let mut factors = Vec::with_capacity(pu.len() + 1);
    let (mut prev_i, mut prev_j) = (0, 0);
    for (&i, &j) in pu.iter().zip(&pv).chain(std::iter::once((&(u.len() + 1), &(v.len() + 1)))) {
        factors.push((i - prev_i - 1, j - prev_j - 1));
        prev_i = i;
        prev_j = j;
    }
    Ok(IntervalFactorization { factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ShuffleWord {
        ShuffleWord::parse(s).unwrap()
    }

    fn letters(s: &str) -> Vec<Letter> {
        s.split_whitespace().map(|t| t.parse().unwrap()).collect()
    }

    #[test]
    fn validity_examples() {
        let ctx = ShuffleContext::new(4, 3);
        assert!(is_valid_shuffle(&letters("x2 a1 a3 x3"), ctx));
        assert!(!is_valid_shuffle(&letters("a1 x2 a2 a3 x1"), ctx));
        assert!(is_valid_shuffle(&[], ctx));
        assert!(is_valid_shuffle(&[], ShuffleContext::new(0, 0)));
        // letter outside the context
        assert!(!is_valid_shuffle(&letters("a5"), ctx));
        // repeated letter
        assert!(!is_valid_shuffle(&letters("a1 a1"), ctx));
    }

    #[test]
    fn letter_order_is_alphabet_major() {
        let mut v = letters("x1 a3 x2 a1");
        v.sort();
        assert_eq!(v, letters("a1 a3 x1 x2"));
    }

    #[test]
    fn ranks() {
        let ctx = ShuffleContext::new(2, 1);
        assert_eq!(rank(&ctx.bottom(), ctx).unwrap(), 0);
        assert_eq!(rank(&ctx.top(), ctx).unwrap(), 3);
        assert_eq!(rank(&w("a1 x1"), ctx).unwrap(), 2);
        assert!(rank(&w("a3"), ctx).is_err());
    }

    #[test]
    fn covers_of_bottom_in_w21() {
        let ctx = ShuffleContext::new(2, 1);
        let mut got = upper_covers(&ctx.bottom(), ctx);
        got.sort();
        let mut want = vec![w("a2"), w("a1"), w("x1 a1 a2"), w("a1 x1 a2"), w("a1 a2 x1")];
        want.sort();
        assert_eq!(got, want);
        assert!(upper_covers(&ctx.top(), ctx).is_empty());
        let ctx11 = ShuffleContext::new(1, 1);
        assert_eq!(upper_covers(&ShuffleWord::empty(), ctx11), vec![w("x1")]);
    }

    #[test]
    fn lower_covers_invert_upper_covers() {
        let ctx = ShuffleContext::new(2, 2);
        let mut frontier = vec![ctx.bottom()];
        let mut seen = HashSet::new();
        while let Some(u) = frontier.pop() {
            if !seen.insert(u.clone()) {
                continue;
            }
            for v in upper_covers(&u, ctx) {
                assert!(lower_covers(&v, ctx).contains(&u), "{u} < {v}");
                frontier.push(v);
            }
        }
    }

    #[test]
    fn decomposition_example_from_large_poset() {
        let ctx = ShuffleContext::new(10, 15);
        let u = w("a2 x3 a4 a5 a10 x6 x8");
        let v = w("x1 x2 x3 x5 a10 x6 x8 x10 x11");
        let f = interval_decomposition(&u, &v, ctx).unwrap();
        assert_eq!(f.factors(), &[(1, 2), (2, 1), (0, 0), (0, 0), (0, 2)]);
        assert_eq!(f.canonical(), vec![(0, 2), (1, 2), (2, 1)]);
    }

    #[test]
    fn decomposition_trivial_and_small() {
        let ctx = ShuffleContext::new(1, 1);
        let u = w("x1 a1");
        let f = interval_decomposition(&u, &u, ctx).unwrap();
        assert!(f.factors().iter().all(|&p| p == (0, 0)));
        assert!(f.canonical().is_empty());

        let f = interval_decomposition(&w("a1"), &w("x1 a1"), ctx).unwrap();
        assert_eq!(f.factors(), &[(0, 1), (0, 0)]);
        assert_eq!(f.canonical(), vec![(0, 1)]);

        assert!(matches!(
            interval_decomposition(&w("x1"), &w("a1"), ctx),
            Err(Error::NotComparable(..))
        ));
    }

    #[test]
    fn factor_counts_match_letter_counts() {
        let ctx = ShuffleContext::new(3, 2);
        let words = [w("a1 x1 a3"), w("x2"), w("a2 x1 x2"), ShuffleWord::empty()];
        for word in &words {
            let below = interval_decomposition(&ctx.bottom(), word, ctx).unwrap();
            let above = interval_decomposition(word, &ctx.top(), ctx).unwrap();
            assert_eq!(below.factors().len(), word.lower_count() + 1);
            assert_eq!(above.factors().len(), word.upper_count() + 1);
        }
    }

    #[test]
    fn rendering_round_trip() {
        let word = w("x2 a1 a3 x3");
        assert_eq!(word.to_string(), "x2 a1 a3 x3");
        assert_eq!(ShuffleWord::parse(&word.to_string()).unwrap(), word);
        assert_eq!(ShuffleWord::empty().to_string(), "∅");
        assert_eq!(serde_json::to_string(&word).unwrap(), r#"["x2","a1","a3","x3"]"#);
        assert_eq!(serde_json::to_string(&ShuffleWord::empty()).unwrap(), "[]");
        assert!("b1".parse::<Letter>().is_err());
        assert!("a0".parse::<Letter>().is_err());
    }
}
