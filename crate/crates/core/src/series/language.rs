use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shuffle::ShufflePoset;
use crate::word::{Letter, ShuffleWord};

/// Letters `a_k`, `b_k` of the alphabet indexing multichain steps. These are
/// not shuffle letters: `a_k` marks a lower letter removed at step `k`, `b_k`
/// an upper letter inserted at step `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AltLetter {
    A(u16),
    B(u16),
}

impl AltLetter {
    pub fn index(self) -> u16 {
        match self {
            AltLetter::A(k) | AltLetter::B(k) => k,
        }
    }
}

impl fmt::Display for AltLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AltLetter::A(k) => write!(f, "a{k}"),
            AltLetter::B(k) => write!(f, "b{k}"),
        }
    }
}

impl FromStr for AltLetter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadLetter(s.to_string());
        let (head, tail) = s.split_at_checked(1).ok_or_else(bad)?;
        let k: u16 = tail.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        match head {
            "a" => Ok(AltLetter::A(k)),
            "b" => Ok(AltLetter::B(k)),
            _ => Err(bad()),
        }
    }
}

/// A multichain `t_0 <= t_1 <= ... <= t_k`, listed from the bottom.
pub type Multichain = Vec<ShuffleWord>;

/// No `a_k` immediately followed by `b_l` with `k <= l`.
pub fn is_l_word(w: &[AltLetter]) -> bool {
    !w.windows(2).any(|p| matches!((p[0], p[1]), (AltLetter::A(k), AltLetter::B(l)) if k <= l))
}

/// Every word of the language that is a rearrangement of `letters`, in
/// lexicographic order.
pub fn l_words(letters: &[AltLetter]) -> Vec<Vec<AltLetter>> {
    let mut cur = letters.to_vec();
    cur.sort_unstable();
    let mut out = Vec::new();
    loop {
        if is_l_word(&cur) {
            out.push(cur.clone());
        }
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn count_l(letters: &[AltLetter]) -> u128 {
    l_words(letters).len() as u128
}

/// The same count read off `1 / (1 - sum a_i - sum b_i + sum_{k <= l} a_k b_l)`
/// in commuting variables, by the recursion that peels one factor of a
/// monomial at a time.
pub fn count_l_series(letters: &[AltLetter]) -> i128 {
    let k = letters.iter().map(|l| l.index() as usize).max().unwrap_or(0);
    // exponents: a_1..a_k then b_1..b_k
    let mut exps = vec![0usize; 2 * k];
    for l in letters {
        match *l {
            AltLetter::A(i) => exps[i as usize - 1] += 1,
            AltLetter::B(i) => exps[k + i as usize - 1] += 1,
        }
    }
    fn coeff(exps: &mut Vec<usize>, k: usize, memo: &mut HashMap<Vec<usize>, i128>) -> i128 {
        if exps.iter().all(|&e| e == 0) {
            return 1;
        }
        if let Some(&c) = memo.get(exps.as_slice()) {
            return c;
        }
        let mut total = 0;
        for v in 0..2 * k {
            if exps[v] > 0 {
                exps[v] -= 1;
                total += coeff(exps, k, memo);
                exps[v] += 1;
            }
        }
        for a in 0..k {
            for b in a..k {
                if exps[a] > 0 && exps[k + b] > 0 {
                    exps[a] -= 1;
                    exps[k + b] -= 1;
                    total -= coeff(exps, k, memo);
                    exps[a] += 1;
                    exps[k + b] += 1;
                }
            }
        }
        memo.insert(exps.clone(), total);
        total
    }
    coeff(&mut exps, k, &mut HashMap::new())
}

/// `s(w)`: lower letters at the positions of the `a`'s, upper letters at the
/// positions of the `b`'s, each alphabet numbered left to right.
pub fn shuffle_word_of(w: &[AltLetter]) -> ShuffleWord {
    let (mut na, mut nb) = (0, 0);
    let letters = w
        .iter()
        .map(|l| match l {
            AltLetter::A(_) => {
                na += 1;
                Letter::Lower(na)
            }
            AltLetter::B(_) => {
                nb += 1;
                Letter::Upper(nb)
            }
        })
        .collect();
    ShuffleWord::new(letters).expect("indices increase in each alphabet")
}

/// `t(w)` padded to `steps` steps: `t_r` keeps the lower letters of `s(w)`
/// whose `a`-index exceeds `r` and the upper letters whose `b`-index is at
/// most `r`. Defined for every word; the language makes it injective.
pub fn multichain_of_word(w: &[AltLetter], steps: usize) -> Result<Multichain> {
    if let Some(l) = w.iter().find(|l| l.index() as usize > steps) {
        return Err(Error::Invariant(format!("letter {l} exceeds {steps} steps")));
    }
    let s = shuffle_word_of(w);
    Ok((0..=steps)
        .map(|r| {
            let kept = w
                .iter()
                .zip(s.letters())
                .filter(|(l, _)| match l {
                    AltLetter::A(k) => *k as usize > r,
                    AltLetter::B(k) => *k as usize <= r,
                })
                .map(|(_, &x)| x)
                .collect();
            ShuffleWord::new(kept).expect("subword of a shuffle word")
        })
        .collect())
}

/// `t(w)` for a word of the language, with as many steps as its largest index.
pub fn l_word_to_multichain(w: &[AltLetter]) -> Result<Multichain> {
    if !is_l_word(w) {
        let text: Vec<String> = w.iter().map(ToString::to_string).collect();
        return Err(Error::NotInLanguage(text.join(" ")));
    }
    let steps = w.iter().map(|l| l.index() as usize).max().unwrap_or(0);
    multichain_of_word(w, steps)
}

/// Lower letters removed and upper letters added at each step.
pub fn refined_steps(chain: &[ShuffleWord]) -> Vec<(usize, usize)> {
    chain
        .windows(2)
        .map(|p| {
            let removed = p[0].letters().iter().filter(|l| l.is_lower() && !p[1].contains(**l)).count();
            let added = p[1].letters().iter().filter(|l| l.is_upper() && !p[0].contains(**l)).count();
            (removed, added)
        })
        .collect()
}

/// Every multichain `0 = t_0 <= ... <= t_steps = 1` of `W_{M,N}`.
pub fn multichains(lower: u16, upper: u16, steps: usize) -> Vec<Multichain> {
    let p = ShufflePoset::with_sizes(lower, upper);
    let poset = p.poset();
    let mut out = Vec::new();
    let mut stack = vec![poset.bottom()];
    fn go(
        poset: &crate::poset::RankedPoset<ShuffleWord>,
        steps: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Multichain>,
    ) {
        let last = *stack.last().unwrap();
        if stack.len() == steps + 1 {
            if last == poset.top() {
                out.push(stack.iter().map(|&e| poset.element(e).clone()).collect());
            }
            return;
        }
        for next in poset.upset(last) {
            stack.push(next);
            go(poset, steps, stack, out);
            stack.pop();
        }
    }
    if steps == 0 {
        if poset.bottom() == poset.top() {
            out.push(vec![poset.element(poset.bottom()).clone()]);
        }
        return out;
    }
    go(poset, steps, &mut stack, &mut out);
    out
}

/// All words with `m` letters `a_*` and `n` letters `b_*`, indices at most `steps`.
fn all_words(m: usize, n: usize, steps: u16) -> Vec<Vec<AltLetter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m + n {
        let mut next = Vec::new();
        for w in &out {
            for k in 1..=steps {
                for l in [AltLetter::A(k), AltLetter::B(k)] {
                    let mut v: Vec<AltLetter> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out.retain(|w| w.iter().filter(|l| matches!(l, AltLetter::A(_))).count() == m);
    out
}

/// `t` maps the language words with `m` `a`'s and `n` `b`'s (indices at
/// most `steps`) one-to-one onto the `steps`-step multichains of `W_{m,n}`,
/// and the letters of step `r` record what changes at step `r`. Returns
/// the number of multichains.
pub fn verify_l_bijection(m: u16, n: u16, steps: usize) -> Result<usize> {
    let mut image: BTreeSet<Multichain> = BTreeSet::new();
    for w in all_words(m as usize, n as usize, steps as u16).into_iter().filter(|w| is_l_word(w)) {
        let chain = multichain_of_word(&w, steps)?;
        let mut census: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for l in &w {
            let e = census.entry(l.index() as usize).or_default();
            match l {
                AltLetter::A(_) => e.0 += 1,
                AltLetter::B(_) => e.1 += 1,
            }
        }
        let expected: Vec<(usize, usize)> =
            (1..=steps).map(|r| census.get(&r).copied().unwrap_or_default()).collect();
        if refined_steps(&chain) != expected {
            return Err(Error::Invariant(format!("steps of t({w:?}) do not match its letters")));
        }
        if !image.insert(chain) {
            return Err(Error::Invariant(format!("t is not injective at {w:?}")));
        }
    }
    let all: BTreeSet<Multichain> = multichains(m, n, steps).into_iter().collect();
    if image != all {
        return Err(Error::Invariant(format!(
            "t hits {} of {} multichains of W({m},{n}) with {steps} steps",
            image.intersection(&all).count(),
            all.len()
        )));
    }
    Ok(all.len())
}
