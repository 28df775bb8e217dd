use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::ChainLabeler;
use crate::error::{Error, Result};
use crate::poset::ElemId;
use crate::shuffle::{cover_step, CoverStep, ShufflePoset};
use crate::word::{leq, rank, upper_covers, Letter, ShuffleContext, ShuffleWord};

/// The three kinds of covers distinguished by the labeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoverKind {
    /// insertion of an upper letter
    #[serde(rename = "x")]
    X,
    /// first deletion of the letter right after an upper letter
    #[serde(rename = "xa")]
    XA,
    /// any other deletion
    #[serde(rename = "a")]
    A,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LabelSequence {
    pub labels: Vec<Letter>,
    pub kinds: Vec<CoverKind>,
}

/// Bit `k` of the state is set once `x_k` has been used by an `(xa)` cover.
type Consumed = u64;

fn label_step(step: CoverStep, consumed: Consumed) -> (Letter, CoverKind, Consumed) {
    match step {
        CoverStep::Insert(x) => (x, CoverKind::X, consumed),
        CoverStep::Delete { after: Some(x), letter } => {
            let bit = 1u64 << x.index();
            if consumed & bit == 0 {
                (x, CoverKind::XA, consumed | bit)
            } else {
                (letter, CoverKind::A, consumed)
            }
        }
        CoverStep::Delete { letter, after: None } => (letter, CoverKind::A, consumed),
    }
}

/// The labeling on a materialized poset of shuffles.
#[derive(Clone, Copy, Debug)]
pub struct ShuffleLabeler<'a> {
    poset: &'a ShufflePoset,
}

impl<'a> ShuffleLabeler<'a> {
    pub fn new(poset: &'a ShufflePoset) -> Self {
        assert!(poset.context().upper < 64, "upper alphabet too large for the label state");
        ShuffleLabeler { poset }
    }
}

impl ChainLabeler for ShuffleLabeler<'_> {
    type Label = Letter;
    type State = Consumed;

    fn initial_state(&self) -> Consumed {
        0
    }

    fn label_cover(&self, state: &Consumed, from: ElemId, to: ElemId) -> (Letter, Consumed) {
        let step = self.poset.step(from, to).expect("label_cover called on a non-cover");
        let (l, _, s) = label_step(step, *state);
        (l, s)
    }
}

/// Label a saturated chain given as words, entered with the `consumed` state.
/// Returns the labels and the state after the last cover.
pub fn label_words_from(
    words: &[ShuffleWord],
    consumed: Consumed,
) -> Result<(LabelSequence, Consumed)> {
    let mut state = consumed;
    let mut seq = LabelSequence { labels: Vec::new(), kinds: Vec::new() };
    for w in words.windows(2) {
        let step = cover_step(&w[0], &w[1])
            .ok_or_else(|| Error::NotAChain(format!("{} does not cover {}", w[1], w[0])))?;
        let (l, k, s) = label_step(step, state);
        seq.labels.push(l);
        seq.kinds.push(k);
        state = s;
    }
    Ok((seq, state))
}

/// Labels of a maximal chain of `W(M,N)` given as words.
pub fn label_words(ctx: ShuffleContext, words: &[ShuffleWord]) -> Result<LabelSequence> {
    check_context(ctx)?;
    if words.first() != Some(&ctx.bottom()) || words.last() != Some(&ctx.top()) {
        return Err(Error::NotAChain("does not run from bottom to top".into()));
    }
    if let Some(w) = words.iter().find(|w| !w.is_valid_in(ctx)) {
        return Err(Error::InvalidWord(w.to_string()));
    }
    Ok(label_words_from(words, 0)?.0)
}

fn check_context(ctx: ShuffleContext) -> Result<()> {
    if ctx.upper >= 64 {
        return Err(Error::TooLarge { size: ctx.upper as usize, limit: 63 });
    }
    Ok(())
}

/// The unique maximal chain with label sequence `sigma`.
pub fn decode_label(ctx: ShuffleContext, sigma: &[Letter]) -> Result<Vec<ShuffleWord>> {
    check_context(ctx)?;
    let bad = |why: String| Error::NotDecodable(why);
    if sigma.len() != ctx.height() {
        return Err(bad(format!("length {} but the poset has rank {}", sigma.len(), ctx.height())));
    }
    let mut count: BTreeMap<Letter, usize> = BTreeMap::new();
    for &l in sigma {
        if !ctx.admits(l) {
            return Err(bad(format!("letter {l} outside the alphabets")));
        }
        *count.entry(l).or_insert(0) += 1;
    }
    let mut doubled = Vec::new();
    for t in 1..=ctx.upper {
        match count.get(&Letter::Upper(t)) {
            Some(1) => {}
            Some(2) => doubled.push(t),
            _ => return Err(bad(format!("x{t} must occur once or twice"))),
        }
    }
    let mut missing = Vec::new();
    for i in 1..=ctx.lower {
        match count.get(&Letter::Lower(i)) {
            None => missing.push(i),
            Some(1) => {}
            Some(_) => return Err(bad(format!("a{i} occurs more than once"))),
        }
    }
    if missing.len() != doubled.len() {
        return Err(bad("multiset is not of the form A + 2X + (upper - X)".into()));
    }
    // x_{j_r} is paired with a_{i_r}
    let partner: BTreeMap<u16, u16> = doubled.iter().copied().zip(missing.iter().copied()).collect();

    let mut w = ctx.bottom();
    let mut chain = vec![w.clone()];
    let mut seen: HashSet<Letter> = HashSet::new();
    for &l in sigma {
        let next = match l {
            Letter::Lower(_) => w.contains(l).then(|| w.without(l)),
            Letter::Upper(t) => match partner.get(&t) {
                Some(&i) if seen.contains(&l) => {
                    let p = w.position(l).unwrap();
                    (w.letters().get(p + 1) == Some(&Letter::Lower(i)))
                        .then(|| w.without(Letter::Lower(i)))
                }
                Some(&i) => w.position(Letter::Lower(i)).and_then(|p| w.with_inserted(p, l)),
                None => {
                    let limit = partner
                        .range(t + 1..)
                        .next()
                        .and_then(|(&j, &i)| {
                            [Letter::Upper(j), Letter::Lower(i)]
                                .iter()
                                .filter_map(|&m| w.position(m))
                                .min()
                        })
                        .unwrap_or(w.len());
                    let range = w.insertion_range(l);
                    let pos = (*range.end()).min(limit);
                    (pos >= *range.start()).then(|| w.with_inserted(pos, l)).flatten()
                }
            },
        };
        w = next.ok_or_else(|| bad(format!("no cover labeled {l} from {w}")))?;
        seen.insert(l);
        chain.push(w.clone());
    }
    if w != ctx.top() {
        return Err(bad(format!("ends at {w}")));
    }
    let relabeled = label_words_from(&chain, 0)?.0.labels;
    if relabeled != sigma {
        return Err(bad(format!(
            "decoded chain relabels as {}",
            relabeled.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
        )));
    }
    Ok(chain)
}

/// The unique chain from `u` to `v` with strictly increasing labels, when the
/// chain below `u` has already used the upper letters in `consumed`.
pub fn gamma_from(
    ctx: ShuffleContext,
    u: &ShuffleWord,
    v: &ShuffleWord,
    consumed: Consumed,
) -> Result<Vec<ShuffleWord>> {
    check_context(ctx)?;
    rank(u, ctx)?;
    rank(v, ctx)?;
    if !leq(u, v) {
        return Err(Error::NotComparable(u.to_string(), v.to_string()));
    }
    let letters = u.letters();
    // lower letters leaving the word through an (xa) cover, keyed by their upper letter
    let mut paired: BTreeMap<u16, Letter> = BTreeMap::new();
    for p in 1..letters.len() {
        let (x, a) = (letters[p - 1], letters[p]);
        if x.is_upper() && a.is_lower() && !v.contains(a) && consumed & (1 << x.index()) == 0 {
            paired.insert(x.index(), a);
        }
    }
    let mut w = u.clone();
    let mut chain = vec![w.clone()];
    let mut plain: Vec<Letter> = letters
        .iter()
        .copied()
        .filter(|l| l.is_lower() && !v.contains(*l) && !paired.values().any(|a| a == l))
        .collect();
    plain.sort_unstable();
    for a in plain {
        w = w.without(a);
        chain.push(w.clone());
    }
    let order_in_v: BTreeMap<Letter, usize> =
        v.letters().iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut events: Vec<(u16, bool)> = paired.keys().map(|&j| (j, false)).collect();
    events.extend(
        v.letters().iter().filter(|l| l.is_upper() && !u.contains(**l)).map(|l| (l.index(), true)),
    );
    events.sort_unstable();
    for (t, insert) in events {
        if insert {
            let x = Letter::Upper(t);
            let here = order_in_v[&x];
            let pos = w
                .letters()
                .iter()
                .rposition(|l| order_in_v.get(l).is_some_and(|&i| i < here))
                .map_or(0, |p| p + 1);
            w = w
                .with_inserted(pos, x)
                .ok_or_else(|| Error::Invariant(format!("cannot insert {x} into {w}")))?;
        } else {
            w = w.without(paired[&t]);
        }
        chain.push(w.clone());
    }
    if &w != v {
        return Err(Error::Invariant(format!("increasing chain from {u} ended at {w}, not {v}")));
    }
    Ok(chain)
}

/// [`gamma_from`] with no upper letter consumed, as for chains starting at the bottom.
pub fn gamma(ctx: ShuffleContext, u: &ShuffleWord, v: &ShuffleWord) -> Result<Vec<ShuffleWord>> {
    gamma_from(ctx, u, v, 0)
}

/// Exchange the labels at ranks `i` and `i + 1` (1-based cover positions) of a
/// maximal chain. Equal labels leave the chain unchanged.
pub fn swap_adjacent(
    ctx: ShuffleContext,
    chain: &[ShuffleWord],
    i: usize,
) -> Result<Vec<ShuffleWord>> {
    let labels = label_words(ctx, chain)?.labels;
    if i == 0 || i >= labels.len() {
        return Err(Error::RankOutOfRange { rank: i, height: labels.len() });
    }
    if labels[i - 1] == labels[i] {
        return Ok(chain.to_vec());
    }
    let mut sigma = labels;
    sigma.swap(i - 1, i);
    let swapped = decode_label(ctx, &sigma)?;
    let differs = (0..chain.len()).filter(|&r| chain[r] != swapped[r]).collect::<Vec<_>>();
    if differs != [i] {
        return Err(Error::Invariant(format!("swap at rank {i} changed ranks {differs:?}")));
    }
    Ok(swapped)
}

/// Pair each element of rank `rho(u) + i` in `[u, w]` with an element of rank
/// `rho(w) - i`, by exchanging the middle blocks of increasing chains.
pub fn rank_symmetry_bijection(
    ctx: ShuffleContext,
    u: &ShuffleWord,
    w: &ShuffleWord,
    i: usize,
) -> Result<Vec<(ShuffleWord, ShuffleWord)>> {
    let (ru, rw) = (rank(u, ctx)?, rank(w, ctx)?);
    if !leq(u, w) {
        return Err(Error::NotComparable(u.to_string(), w.to_string()));
    }
    if i > rw - ru {
        return Err(Error::RankOutOfRange { rank: i, height: rw - ru });
    }
    let bottom = ctx.bottom();
    let to_u = gamma(ctx, &bottom, u)?;
    let (_, after_u) = label_words_from(&to_u, 0)?;
    let mut pairs = Vec::new();
    for v in interval_layer(ctx, u, w, i) {
        let mut chain = to_u.clone();
        let mut state = after_u;
        for (from, to) in [(u, &v), (&v, w), (w, &ctx.top())] {
            let seg = gamma_from(ctx, from, to, state)?;
            state = label_words_from(&seg, state)?.1;
            chain.extend(seg.into_iter().skip(1));
        }
        let labels = label_words(ctx, &chain)?.labels;
        let rv = ru + i;
        let sigma: Vec<Letter> = [&labels[..ru], &labels[rv..rw], &labels[ru..rv], &labels[rw..]]
            .concat();
        let image = decode_label(ctx, &sigma)?;
        if image[ru] != *u || image[rw] != *w {
            return Err(Error::Invariant(format!("exchanged chain for {v} leaves [{u}, {w}]")));
        }
        pairs.push((v, image[rw - i].clone()));
    }
    Ok(pairs)
}

/// Elements of `[u, w]` at rank `rho(u) + i`, in sorted order.
fn interval_layer(
    ctx: ShuffleContext,
    u: &ShuffleWord,
    w: &ShuffleWord,
    i: usize,
) -> Vec<ShuffleWord> {
    let mut layer = vec![u.clone()];
    for _ in 0..i {
        let next: HashSet<ShuffleWord> = layer
            .iter()
            .flat_map(|t| upper_covers(t, ctx))
            .filter(|t| leq(t, w))
            .collect();
        layer = next.into_iter().collect();
    }
    layer.sort();
    layer
}

/// Pair every label with the corank of the bottom of its cover.
pub fn cl_augmented_label(labels: &[Letter]) -> Vec<(Letter, usize)> {
    let n = labels.len();
    labels.iter().enumerate().map(|(r, &l)| (l, n - r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::{increasing_completion_counts, reachable_states, ChainSet};

    fn w(s: &str) -> ShuffleWord {
        ShuffleWord::parse(s).unwrap()
    }

    fn ls(s: &str) -> Vec<Letter> {
        s.split_whitespace().map(|t| t.parse().unwrap()).collect()
    }

    fn chain(s: &[&str]) -> Vec<ShuffleWord> {
        s.iter().map(|t| w(t)).collect()
    }

    #[test]
    fn small_chains() {
        let ctx = ShuffleContext::new(1, 1);
        let seq = label_words(ctx, &chain(&["a1", "x1 a1", "x1"])).unwrap();
        assert_eq!(seq.labels, ls("x1 x1"));
        assert_eq!(seq.kinds, vec![CoverKind::X, CoverKind::XA]);
        let seq = label_words(ctx, &chain(&["a1", "a1 x1", "x1"])).unwrap();
        assert_eq!(seq.labels, ls("x1 a1"));
        assert_eq!(seq.kinds, vec![CoverKind::X, CoverKind::A]);
    }

    #[test]
    fn worked_examples_decode() {
        let ctx = ShuffleContext::new(2, 3);
        let c = chain(&["a1 a2", "a1", "a1 x3", "a1 x1 x3", "x1 x3", "x1 x2 x3"]);
        assert_eq!(label_words(ctx, &c).unwrap().labels, ls("a2 x3 x1 a1 x2"));
        assert_eq!(decode_label(ctx, &ls("a2 x3 x1 a1 x2")).unwrap(), c);

        let ctx = ShuffleContext::new(4, 5);
        let c = chain(&[
            "a1 a2 a3 a4",
            "a1 a2 x3 a3 a4",
            "a1 a2 x3 a3 a4 x5",
            "a1 x3 a3 a4 x5",
            "a1 x3 x4 a3 a4 x5",
            "x2 a1 x3 x4 a3 a4 x5",
            "x1 x2 a1 x3 x4 a3 a4 x5",
            "x1 x2 x3 x4 a3 a4 x5",
            "x1 x2 x3 x4 a4 x5",
            "x1 x2 x3 x4 x5",
        ]);
        let sigma = ls("x3 x5 a2 x4 x2 x1 x2 x4 a4");
        assert_eq!(decode_label(ctx, &sigma).unwrap(), c);
        let seq = label_words(ctx, &c).unwrap();
        assert_eq!(seq.labels, sigma);
        assert_eq!(seq.kinds.iter().filter(|&&k| k == CoverKind::XA).count(), 2);

        let ctx = ShuffleContext::new(2, 1);
        assert_eq!(
            decode_label(ctx, &ls("x1 x1 a2")).unwrap(),
            chain(&["a1 a2", "x1 a1 a2", "x1 a2", "x1"])
        );
    }

    #[test]
    fn decode_rejects_bad_multisets() {
        let ctx = ShuffleContext::new(2, 1);
        assert!(decode_label(ctx, &ls("a1 a1 x1")).is_err());
        assert!(decode_label(ctx, &ls("a1 x1")).is_err());
        assert!(decode_label(ctx, &ls("x1 x1 x1")).is_err());
        assert!(decode_label(ctx, &ls("a1 a2 a3")).is_err());
    }

    #[test]
    fn round_trip_every_chain() {
        for (m, n) in [(1, 1), (2, 1), (2, 2), (3, 2), (2, 3), (1, 4)] {
            let p = ShufflePoset::with_sizes(m, n);
            let lab = ShuffleLabeler::new(&p);
            let chains = ChainSet::enumerate(p.poset(), &lab);
            for c in 0..chains.len() {
                let words = p.words(chains.chain(c).elements());
                assert_eq!(decode_label(p.context(), chains.labels(c)).unwrap(), words);
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let ctx = ShuffleContext::new(2, 1);
        let g = gamma(ctx, &ctx.bottom(), &ctx.top()).unwrap();
        assert_eq!(g, chain(&["a1 a2", "a2", "", "x1"]));
        assert_eq!(label_words(ctx, &g).unwrap().labels, ls("a1 a2 x1"));
        assert_eq!(gamma(ctx, &w("x1 a2"), &w("x1 a2")).unwrap(), chain(&["x1 a2"]));

        let ctx = ShuffleContext::new(1, 1);
        let g = gamma(ctx, &w("x1 a1"), &w("x1")).unwrap();
        let (seq, _) = label_words_from(&g, 0).unwrap();
        assert_eq!(seq.labels, ls("x1"));
        assert_eq!(seq.kinds, vec![CoverKind::XA]);
    }

    #[test]
    fn gamma_is_the_unique_increasing_completion() {
        for (m, n) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
            let p = ShufflePoset::with_sizes(m, n);
            let lab = ShuffleLabeler::new(&p);
            for (u, s) in reachable_states(p.poset(), &lab) {
                let counts = increasing_completion_counts(p.poset(), &lab, u, s, true);
                for v in p.upset(u) {
                    assert_eq!(counts[v], 1);
                    let g = gamma_from(p.context(), p.element(u), p.element(v), s).unwrap();
                    let (seq, _) = label_words_from(&g, s).unwrap();
                    assert!(seq.labels.windows(2).all(|x| x[0] < x[1]));
                    assert_eq!(g.len(), p.rank(v) - p.rank(u) + 1);
                }
            }
        }
    }

    #[test]
    fn swaps() {
        let ctx = ShuffleContext::new(2, 1);
        let c = decode_label(ctx, &ls("x1 x1 a2")).unwrap();
        assert_eq!(swap_adjacent(ctx, &c, 1).unwrap(), c);
        let d = swap_adjacent(ctx, &c, 2).unwrap();
        assert_eq!(d, chain(&["a1 a2", "x1 a1 a2", "x1 a1", "x1"]));
        assert_eq!(label_words(ctx, &d).unwrap().labels, ls("x1 a2 x1"));
        assert_eq!(swap_adjacent(ctx, &d, 2).unwrap(), c);
        assert!(swap_adjacent(ctx, &c, 3).is_err());
    }

    #[test]
    fn rank_symmetry_pairs() {
        let ctx = ShuffleContext::new(2, 1);
        let pairs = rank_symmetry_bijection(ctx, &ctx.bottom(), &ctx.top(), 1).unwrap();
        assert_eq!(pairs.len(), 5);
        let images: HashSet<_> = pairs.iter().map(|(_, t)| t.clone()).collect();
        assert_eq!(images.len(), 5);
        assert!(images.iter().all(|t| rank(t, ctx).unwrap() == 2));

        let pairs = rank_symmetry_bijection(ctx, &ctx.bottom(), &ctx.top(), 0).unwrap();
        assert_eq!(pairs, vec![(ctx.bottom(), ctx.top())]);

        let ctx = ShuffleContext::new(1, 1);
        let pairs = rank_symmetry_bijection(ctx, &ctx.bottom(), &ctx.top(), 1).unwrap();
        let images: HashSet<_> = pairs.iter().map(|(_, t)| t.clone()).collect();
        assert_eq!(images.len(), 3);
    }

    #[test]
    fn augmented_labels() {
        assert_eq!(
            cl_augmented_label(&ls("x1 x1")),
            vec![(Letter::Upper(1), 2), (Letter::Upper(1), 1)]
        );
        assert_eq!(
            cl_augmented_label(&ls("a1 a2 x1")),
            vec![(Letter::Lower(1), 3), (Letter::Lower(2), 2), (Letter::Upper(1), 1)]
        );
    }
}
