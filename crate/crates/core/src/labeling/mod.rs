//! Chain labelings of graded posets and exhaustive verifiers for the
//! increasing-completion (R, R*) and adjacent-swap (S) properties.
//!
//! A labeling is described by a [`ChainLabeler`]: the label of a cover may
//! depend on a state accumulated along the chain prefix, which captures
//! labelings where a cover's label depends on the initial subchain. When the
//! state is `()` the labeling depends on covers only.

mod lambda;
mod natural;

pub use lambda::{
    cl_augmented_label, decode_label, gamma, gamma_from, label_words, label_words_from,
    rank_symmetry_bijection, swap_adjacent, CoverKind, LabelSequence, ShuffleLabeler,
};
pub use natural::{EdgeLabeler, NaturalLabeler};

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Debug};
use std::hash::Hash;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poset::{ElemId, RankedPoset};

pub trait ChainLabeler {
    type Label: Copy + Ord + Hash + Debug + Send + Sync;
    type State: Clone + Eq + Hash + Debug + Send + Sync;

    fn initial_state(&self) -> Self::State;

    /// Label of the cover `from < to` reached with `state`, and the state after it.
    fn label_cover(&self, state: &Self::State, from: ElemId, to: ElemId)
        -> (Self::Label, Self::State);
}

/// A saturated chain from the bottom to the top, as element ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaximalChain(pub Vec<ElemId>);

impl MaximalChain {
    pub fn elements(&self) -> &[ElemId] {
        &self.0
    }

    pub fn check<T>(&self, p: &RankedPoset<T>) -> Result<()> {
        let c = &self.0;
        if c.first() != Some(&p.bottom()) || c.last() != Some(&p.top()) {
            return Err(Error::NotAChain("does not run from bottom to top".into()));
        }
        if let Some(w) = c.windows(2).find(|w| !p.covers(w[0], w[1])) {
            return Err(Error::NotAChain(format!("{} does not cover {}", w[1], w[0])));
        }
        Ok(())
    }
}

/// Labels of a saturated chain starting from the labeler's initial state.
pub fn chain_labels<T, L: ChainLabeler>(
    p: &RankedPoset<T>,
    labeler: &L,
    chain: &MaximalChain,
) -> Result<Vec<L::Label>> {
    chain.check(p)?;
    Ok(labels_along(labeler, labeler.initial_state(), chain.elements()).0)
}

/// Labels and final state along a sequence of covers, starting in `state`.
pub fn labels_along<L: ChainLabeler>(
    labeler: &L,
    mut state: L::State,
    elems: &[ElemId],
) -> (Vec<L::Label>, L::State) {
    let mut labels = Vec::with_capacity(elems.len().saturating_sub(1));
    for w in elems.windows(2) {
        let (l, s) = labeler.label_cover(&state, w[0], w[1]);
        labels.push(l);
        state = s;
    }
    (labels, state)
}

/// Every maximal chain of a poset with its label sequence, stored flat.
#[derive(Clone, Debug)]
pub struct ChainSet<L> {
    height: usize,
    elems: Vec<u32>,
    labels: Vec<L>,
}

impl<L: Copy> ChainSet<L> {
    pub fn enumerate<T, Lb>(p: &RankedPoset<T>, labeler: &Lb) -> Self
    where
        Lb: ChainLabeler<Label = L>,
    {
        let height = p.height();
        let mut set = ChainSet { height, elems: Vec::new(), labels: Vec::new() };
        let mut path = vec![p.bottom() as u32];
        let mut labels = Vec::with_capacity(height);
        walk(p, labeler, labeler.initial_state(), &mut path, &mut labels, &mut set);
        set
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.labels.len().checked_div(self.height).unwrap_or(self.elems.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self, c: usize) -> &[u32] {
        &self.elems[c * (self.height + 1)..(c + 1) * (self.height + 1)]
    }

    pub fn chain(&self, c: usize) -> MaximalChain {
        MaximalChain(self.elements(c).iter().map(|&e| e as ElemId).collect())
    }

    pub fn labels(&self, c: usize) -> &[L] {
        &self.labels[c * self.height..(c + 1) * self.height]
    }
}

fn walk<T, Lb: ChainLabeler>(
    p: &RankedPoset<T>,
    labeler: &Lb,
    state: Lb::State,
    path: &mut Vec<u32>,
    labels: &mut Vec<Lb::Label>,
    out: &mut ChainSet<Lb::Label>,
) {
    let here = *path.last().unwrap() as ElemId;
    if here == p.top() {
        out.elems.extend_from_slice(path);
        out.labels.extend_from_slice(labels);
        return;
    }
    for &v in p.upper_covers(here) {
        let (l, next) = labeler.label_cover(&state, here, v);
        path.push(v as u32);
        labels.push(l);
        walk(p, labeler, next, path, labels, out);
        path.pop();
        labels.pop();
    }
}

/// A failed property check with a description of the offending configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample(pub String);

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type Check = std::result::Result<(), Counterexample>;

/// Every `(element, state)` pair reached by some saturated chain from the bottom.
pub fn reachable_states<T, L: ChainLabeler>(
    p: &RankedPoset<T>,
    labeler: &L,
) -> Vec<(ElemId, L::State)> {
    let mut seen: HashSet<(ElemId, L::State)> = HashSet::new();
    let mut layer = vec![(p.bottom(), labeler.initial_state())];
    let mut out = Vec::new();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (u, s) in layer {
            if !seen.insert((u, s.clone())) {
                continue;
            }
            for &v in p.upper_covers(u) {
                next.push((v, labeler.label_cover(&s, u, v).1));
            }
            out.push((u, s));
        }
        layer = next;
    }
    out
}

/// The label of a cover never depends on the chain prefix.
pub fn verify_e<T: Debug + Sync, L: ChainLabeler + Sync>(p: &RankedPoset<T>, labeler: &L) -> Check {
    let mut seen: HashMap<(ElemId, ElemId), L::Label> = HashMap::new();
    for (u, s) in reachable_states(p, labeler) {
        for &v in p.upper_covers(u) {
            let l = labeler.label_cover(&s, u, v).0;
            if let Some(prev) = seen.insert((u, v), l) {
                if prev != l {
                    return Err(Counterexample(format!(
                        "cover {:?} < {:?} labeled both {prev:?} and {l:?}",
                        p.element(u),
                        p.element(v)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Every chain prefix ending at `w` and every `u > w` admit exactly one
/// strictly increasing labeled completion from `w` to `u`.
pub fn verify_r_star<T: Debug + Sync, L: ChainLabeler + Sync>(
    p: &RankedPoset<T>,
    labeler: &L,
) -> Check {
    verify_completions(p, labeler, true)
}

/// As [`verify_r_star`] with weakly increasing completions.
pub fn verify_r<T: Debug + Sync, L: ChainLabeler + Sync>(p: &RankedPoset<T>, labeler: &L) -> Check {
    verify_completions(p, labeler, false)
}

fn verify_completions<T: Debug + Sync, L: ChainLabeler + Sync>(
    p: &RankedPoset<T>,
    labeler: &L,
    strict: bool,
) -> Check {
    let states = reachable_states(p, labeler);
    states.par_iter().try_for_each(|(w, s)| {
        let counts = increasing_completion_counts(p, labeler, *w, s.clone(), strict);
        for u in p.upset(*w).filter(|&u| u != *w) {
            if counts[u] != 1 {
                return Err(Counterexample(format!(
                    "{} {} increasing completions from {:?} (state {s:?}) to {:?}",
                    counts[u],
                    if strict { "strictly" } else { "weakly" },
                    p.element(*w),
                    p.element(u)
                )));
            }
        }
        Ok(())
    })
}

/// Number of increasing saturated chains from `w` (entered with `state`) to
/// every element of the poset.
pub fn increasing_completion_counts<T, L: ChainLabeler>(
    p: &RankedPoset<T>,
    labeler: &L,
    w: ElemId,
    state: L::State,
    strict: bool,
) -> Vec<u64> {
    fn go<T, L: ChainLabeler>(
        p: &RankedPoset<T>,
        labeler: &L,
        here: ElemId,
        state: L::State,
        last: Option<L::Label>,
        strict: bool,
        counts: &mut Vec<u64>,
    ) {
        counts[here] += 1;
        for &v in p.upper_covers(here) {
            let (l, next) = labeler.label_cover(&state, here, v);
            let ok = match last {
                None => true,
                Some(prev) => {
                    if strict {
                        prev < l
                    } else {
                        prev <= l
                    }
                }
            };
            if ok {
                go(p, labeler, v, next, Some(l), strict, counts);
            }
        }
    }
    let mut counts = vec![0u64; p.len()];
    go(p, labeler, w, state, None, strict, &mut counts);
    counts
}

/// Injectivity on maximal chains, plus: whenever `labels[i] != labels[i+1]`
/// there is exactly one chain differing only at rank `i` whose labels are
/// those of `c` with positions `i` and `i+1` exchanged.
pub fn verify_s<T: Debug + Sync, L: ChainLabeler + Sync>(
    p: &RankedPoset<T>,
    labeler: &L,
    chains: &ChainSet<L::Label>,
) -> Check {
    let mut seen: HashMap<&[L::Label], usize> = HashMap::with_capacity(chains.len());
    for c in 0..chains.len() {
        if let Some(prev) = seen.insert(chains.labels(c), c) {
            return Err(Counterexample(format!(
                "chains {:?} and {:?} share labels {:?}",
                chains.chain(prev),
                chains.chain(c),
                chains.labels(c)
            )));
        }
    }
    let n = chains.height();
    (0..chains.len()).into_par_iter().try_for_each(|c| {
        let elems: Vec<ElemId> = chains.elements(c).iter().map(|&e| e as ElemId).collect();
        let labels = chains.labels(c);
        for i in 1..n {
            if labels[i - 1] == labels[i] {
                continue;
            }
            let mut want = labels.to_vec();
            want.swap(i - 1, i);
            let matches = swap_candidates(p, &elems, i)
                .filter(|t| {
                    let mut alt = elems.clone();
                    alt[i] = *t;
                    labels_along(labeler, labeler.initial_state(), &alt).0 == want
                })
                .count();
            if matches != 1 {
                return Err(Counterexample(format!(
                    "{matches} chains swap ranks {i},{} of {:?} (labels {labels:?})",
                    i + 1,
                    elems.iter().map(|&e| p.element(e)).collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    })
}

/// Elements `t != c[i]` with `c[i-1] < t < c[i+1]` (covers).
pub(crate) fn swap_candidates<'a, T>(
    p: &'a RankedPoset<T>,
    elems: &'a [ElemId],
    i: usize,
) -> impl Iterator<Item = ElemId> + 'a {
    p.upper_covers(elems[i - 1])
        .iter()
        .copied()
        .filter(move |&t| t != elems[i] && p.covers(t, elems[i + 1]))
}

/// Number of maximal chains whose label sequence is weakly decreasing.
pub fn decreasing_chain_count<T, L: ChainLabeler>(p: &RankedPoset<T>, labeler: &L) -> u128 {
    fn go<T, L: ChainLabeler>(
        p: &RankedPoset<T>,
        labeler: &L,
        here: ElemId,
        state: L::State,
        last: Option<L::Label>,
    ) -> u128 {
        if here == p.top() {
            return 1;
        }
        let mut total = 0;
        for &v in p.upper_covers(here) {
            let (l, next) = labeler.label_cover(&state, here, v);
            if last.is_none_or(|prev| l <= prev) {
                total += go(p, labeler, v, next, Some(l));
            }
        }
        total
    }
    go(p, labeler, p.bottom(), labeler.initial_state(), None)
}

/// Which labeling properties have been established by the verifiers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LabelingKind {
    pub c: bool,
    pub e: bool,
    pub r: bool,
    pub r_star: bool,
    pub s: bool,
}

impl LabelingKind {
    /// Run every verifier. Any [`ChainLabeler`] is a C-labeling by construction.
    pub fn establish<T: Debug + Sync, L: ChainLabeler + Sync>(p: &RankedPoset<T>, labeler: &L) -> Self {
        let chains = ChainSet::enumerate(p, labeler);
        let e = verify_e(p, labeler).is_ok();
        LabelingKind {
            c: true,
            e,
            r: verify_r(p, labeler).is_ok(),
            r_star: verify_r_star(p, labeler).is_ok(),
            s: verify_s(p, labeler, &chains).is_ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::product_of_chains;
    use crate::shuffle::ShufflePoset;

    #[test]
    fn shuffle_labeling_properties() {
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let p = ShufflePoset::with_sizes(m, n);
            let lab = ShuffleLabeler::new(&p);
            let kind = LabelingKind::establish(p.poset(), &lab);
            assert!(kind.r_star && kind.s && kind.c, "W({m},{n}): {kind:?}");
        }
    }

    #[test]
    fn lambda_is_not_an_edge_labeling() {
        // the second deletion after x1 in W(2,1) reads differently by prefix
        let p = ShufflePoset::with_sizes(2, 1);
        assert!(verify_e(p.poset(), &ShuffleLabeler::new(&p)).is_err());
    }

    #[test]
    fn natural_labels_of_product_are_r_but_not_r_star() {
        let (p, _) = product_of_chains(&[2, 1]);
        let lab = NaturalLabeler::new(&p);
        assert!(verify_r(&p, &lab).is_ok());
        assert!(verify_r_star(&p, &lab).is_err());
        assert!(verify_e(&p, &lab).is_ok());
        let chains = ChainSet::enumerate(&p, &lab);
        assert!(verify_s(&p, &lab, &chains).is_ok());
    }

    #[test]
    fn constant_labeling_fails_injectivity() {
        let p = ShufflePoset::with_sizes(2, 1);
        let lab = EdgeLabeler::new(|_, _| 0u8);
        let chains = ChainSet::enumerate(p.poset(), &lab);
        let err = verify_s(p.poset(), &lab, &chains).unwrap_err();
        assert!(err.0.contains("share labels"));
    }

    #[test]
    fn twelve_distinct_sequences_in_w21() {
        let p = ShufflePoset::with_sizes(2, 1);
        let lab = ShuffleLabeler::new(&p);
        let chains = ChainSet::enumerate(p.poset(), &lab);
        assert_eq!(chains.len(), 12);
        let distinct: HashSet<_> = (0..12).map(|c| chains.labels(c).to_vec()).collect();
        assert_eq!(distinct.len(), 12);
    }

    #[test]
    fn decreasing_chains() {
        let p = ShufflePoset::with_sizes(2, 1);
        assert_eq!(decreasing_chain_count(p.poset(), &ShuffleLabeler::new(&p)), 3);
        let p = ShufflePoset::with_sizes(1, 1);
        assert_eq!(decreasing_chain_count(p.poset(), &ShuffleLabeler::new(&p)), 2);
        for m in 0..5 {
            let p = ShufflePoset::with_sizes(m, 0);
            assert_eq!(decreasing_chain_count(p.poset(), &ShuffleLabeler::new(&p)), 1);
        }
    }

    #[test]
    fn chain_check_rejects_non_chains() {
        let p = ShufflePoset::with_sizes(1, 1);
        let bad = MaximalChain(vec![p.bottom(), p.top()]);
        assert!(chain_labels(p.poset(), &ShuffleLabeler::new(&p), &bad).is_err());
    }
}
