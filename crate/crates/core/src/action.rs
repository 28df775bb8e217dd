//! The symmetric group acting on maximal chains through their labels: the
//! generator `s_i` exchanges the labels at positions `i` and `i + 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorial, q_from_u128, Q};
use crate::error::{Error, Result};
use crate::labeling::{labels_along, ChainLabeler, ChainSet, Check, Counterexample};
use crate::poset::{is_isomorphic, product_of_chains, ElemId, RankedPoset};
use crate::symfunc::{flag_qsym, frobenius_from_character, frobenius_from_orbit_types, Partition};

/// Chain ids are indices into the [`ChainSet`] the action was built from.
pub type ChainId = u32;

/// Generator tables of the action on a set of maximal chains.
#[derive(Clone, Debug)]
pub struct LocalAction<L> {
    chains: ChainSet<L>,
    /// `gens[i - 1][c]` is `s_i . c`
    gens: Vec<Vec<ChainId>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit<L> {
    pub chains: Vec<ChainId>,
    /// multiplicities of the label multiset, as a partition
    pub kind: Partition,
    /// the label multiset with multiplicities
    pub multiset: Vec<(L, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub chain: ChainId,
    /// 1-based positions grouped by equal labels, ordered by least element
    pub blocks: Vec<Vec<usize>>,
}

impl<L> LocalAction<L>
where
    L: Copy + Ord + Hash + Debug + Send + Sync,
{
    /// Tabulate every generator. Fails unless the labels are injective on
    /// chains and every exchange of unequal adjacent labels is realized.
    pub fn new(chains: ChainSet<L>) -> Result<Self> {
        let n = chains.height();
        let mut index: HashMap<&[L], ChainId> = HashMap::with_capacity(chains.len());
        for c in 0..chains.len() {
            if let Some(prev) = index.insert(chains.labels(c), c as ChainId) {
                return Err(Error::Invariant(format!(
                    "chains {prev} and {c} share the label sequence {:?}",
                    chains.labels(c)
                )));
            }
        }
        let gens = (1..n)
            .map(|i| {
                (0..chains.len())
                    .into_par_iter()
                    .map(|c| {
                        let labels = chains.labels(c);
                        if labels[i - 1] == labels[i] {
                            return Ok(c as ChainId);
                        }
                        let mut swapped = labels.to_vec();
                        swapped.swap(i - 1, i);
                        index.get(swapped.as_slice()).copied().ok_or_else(|| {
                            Error::Invariant(format!("no chain has labels {swapped:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalAction { chains, gens })
    }

    /// Enumerate the maximal chains of `p` under `labeler` and build the action.
    pub fn from_poset<T, Lb>(p: &RankedPoset<T>, labeler: &Lb) -> Result<Self>
    where
        Lb: ChainLabeler<Label = L>,
    {
        Self::new(ChainSet::enumerate(p, labeler))
    }

    pub fn chains(&self) -> &ChainSet<L> {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Rank of the poset, i.e. the degree of the symmetric group.
    pub fn degree(&self) -> usize {
        self.chains.height()
    }

    pub fn act_generator(&self, i: usize, c: ChainId) -> ChainId {
        self.gens[i - 1][c as usize]
    }

    /// Apply `s_{w_1} s_{w_2} ... s_{w_k}` to `c`, rightmost factor first.
    pub fn act_word(&self, word: &[usize], c: ChainId) -> ChainId {
        word.iter().rev().fold(c, |c, &i| self.act_generator(i, c))
    }

    /// Connected components of the generator graph, ordered by least chain.
    pub fn orbits(&self) -> Vec<Orbit<L>> {
        let mut parent: Vec<ChainId> = (0..self.len() as ChainId).collect();
        fn find(parent: &mut [ChainId], mut x: ChainId) -> ChainId {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for table in &self.gens {
            for (c, &d) in table.iter().enumerate() {
                let (a, b) = (find(&mut parent, c as ChainId), find(&mut parent, d));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
        let mut members: BTreeMap<ChainId, Vec<ChainId>> = BTreeMap::new();
        for c in 0..self.len() as ChainId {
            let root = find(&mut parent, c);
            members.entry(root).or_default().push(c);
        }
        members
            .into_values()
            .map(|chains| {
                let multiset = label_multiset(self.chains.labels(chains[0] as usize));
                let kind = Partition::new(multiset.iter().map(|&(_, m)| m).collect());
                Orbit { chains, kind, multiset }
            })
            .collect()
    }

    /// Positions with equal labels, checked against the action: a
    /// transposition fixes the chain exactly when it stays inside a block.
    pub fn stabilizer(&self, c: ChainId) -> Result<StabilizerReport> {
        let labels = self.chains.labels(c as usize);
        let mut by_label: BTreeMap<L, Vec<usize>> = BTreeMap::new();
        for (pos, &l) in labels.iter().enumerate() {
            by_label.entry(l).or_default().push(pos + 1);
        }
        let mut blocks: Vec<Vec<usize>> = by_label.into_values().collect();
        blocks.sort();
        let block_of: Vec<usize> = {
            let mut b = vec![0; labels.len() + 1];
            for (k, block) in blocks.iter().enumerate() {
                for &p in block {
                    b[p] = k;
                }
            }
            b
        };
        for a in 1..=labels.len() {
            for b in a + 1..=labels.len() {
                let fixed = self.act_word(&transposition_word(a, b), c) == c;
                if fixed != (block_of[a] == block_of[b]) {
                    return Err(Error::Invariant(format!(
                        "transposition ({a} {b}) {} chain {c}",
                        if fixed { "fixes" } else { "moves" }
                    )));
                }
            }
        }
        Ok(StabilizerReport { chain: c, blocks })
    }

    /// Number of chains fixed by the permutation with cycle type `lambda`
    /// whose cycles run over consecutive positions, longest cycle first.
    pub fn character_value(&self, lambda: &Partition) -> u128 {
        self.fixed_points(&cycle_word(lambda.parts()))
    }

    /// Same class, different representative: shortest cycles first, each
    /// traversed in the opposite direction.
    pub fn character_value_alt(&self, lambda: &Partition) -> u128 {
        let mut parts = lambda.parts().to_vec();
        parts.reverse();
        let mut word = cycle_word(&parts);
        word.reverse();
        self.fixed_points(&word)
    }

    fn fixed_points(&self, word: &[usize]) -> u128 {
        (0..self.len() as ChainId)
            .into_par_iter()
            .filter(|&c| self.act_word(word, c) == c)
            .count() as u128
    }

    /// Character values on every class of `S_n`.
    pub fn character(&self) -> BTreeMap<Partition, Q> {
        Partition::all(self.degree())
            .into_iter()
            .map(|l| {
                let v = q_from_u128(self.character_value(&l));
                (l, v)
            })
            .collect()
    }

    /// `s_i^2 = 1`, `(s_i s_{i+1})^3 = 1`, `(s_i s_j)^2 = 1` for `|i - j| >= 2`,
    /// on every chain.
    pub fn verify_coxeter(&self) -> Check {
        let n = self.degree();
        let mut words: Vec<Vec<usize>> = Vec::new();
        for i in 1..n {
            words.push(vec![i, i]);
            if i + 1 < n {
                words.push([i, i + 1].repeat(3));
            }
            for j in i + 2..n {
                words.push([i, j].repeat(2));
            }
        }
        (0..self.len() as ChainId).into_par_iter().try_for_each(|c| {
            match words.iter().find(|w| self.act_word(w, c) != c) {
                Some(w) => Err(Counterexample(format!("relation {w:?} moves chain {c}"))),
                None => Ok(()),
            }
        })
    }

    /// `s_i . c` differs from `c` at most at rank `i`.
    pub fn verify_locality(&self) -> Check {
        let n = self.degree();
        (0..self.len()).into_par_iter().try_for_each(|c| {
            for i in 1..n {
                let d = self.act_generator(i, c as ChainId) as usize;
                let (ce, de) = (self.chains.elements(c), self.chains.elements(d));
                if let Some(r) = (0..=n).find(|&r| r != i && ce[r] != de[r]) {
                    return Err(Counterexample(format!(
                        "s_{i} moves chain {c} at rank {r}"
                    )));
                }
            }
            Ok(())
        })
    }

    /// Every stabilizer is the Young subgroup of its equal-label blocks, and
    /// orbit size times stabilizer order is `n!`.
    pub fn verify_stabilizers(&self, orbits: &[Orbit<L>]) -> Check {
        let n = self.degree();
        orbits.par_iter().try_for_each(|orbit| {
            for &c in &orbit.chains {
                let report = self.stabilizer(c).map_err(|e| Counterexample(e.to_string()))?;
                let order: u128 = report.blocks.iter().map(|b| factorial(b.len())).product();
                if order * orbit.chains.len() as u128 != factorial(n) {
                    return Err(Counterexample(format!(
                        "chain {c}: orbit {} times stabilizer {order} is not {n}!",
                        orbit.chains.len()
                    )));
                }
            }
            Ok(())
        })
    }

    /// `sum over orbits of h_nu`.
    pub fn frobenius_from_orbits(&self) -> crate::symfunc::SymPoly {
        let types: Vec<Partition> = self.orbits().into_iter().map(|o| o.kind).collect();
        frobenius_from_orbit_types(self.degree(), &types)
    }
}

/// Word for the transposition `(a b)`, `a < b`, as
/// `s_a s_{a+1} ... s_{b-1} ... s_{a+1} s_a`.
fn transposition_word(a: usize, b: usize) -> Vec<usize> {
    let up: Vec<usize> = (a..b).collect();
    let mut w = up.clone();
    w.extend(up.iter().rev().skip(1));
    w
}

/// Product of cycles `(p p+1 ... p+k-1)` on consecutive blocks of the given sizes.
fn cycle_word(parts: &[usize]) -> Vec<usize> {
    let mut word = Vec::new();
    let mut start = 1;
    for &k in parts {
        word.extend(start..start + k - 1);
        start += k;
    }
    word
}

fn label_multiset<L: Copy + Ord>(labels: &[L]) -> Vec<(L, usize)> {
    let mut m: BTreeMap<L, usize> = BTreeMap::new();
    for &l in labels {
        *m.entry(l).or_insert(0) += 1;
    }
    m.into_iter().collect()
}

/// The union of an orbit's chains as a poset, compared with the product of
/// chains of the orbit's type.
pub fn orbit_is_product_of_chains<L>(
    action: &LocalAction<L>,
    orbit: &Orbit<L>,
) -> Result<bool>
where
    L: Copy + Ord + Hash + Debug + Send + Sync,
{
    let mut ids: Vec<ElemId> = Vec::new();
    let mut covers: Vec<(ElemId, ElemId)> = Vec::new();
    for &c in &orbit.chains {
        let elems = action.chains().elements(c as usize);
        ids.extend(elems.iter().map(|&e| e as ElemId));
        covers.extend(elems.windows(2).map(|w| (w[0] as ElemId, w[1] as ElemId)));
    }
    ids.sort_unstable();
    ids.dedup();
    let local: HashMap<ElemId, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    covers.sort_unstable();
    covers.dedup();
    let covers: Vec<(usize, usize)> = covers.iter().map(|(a, b)| (local[a], local[b])).collect();
    let sub = RankedPoset::from_covers(ids, &covers)?;
    let (target, _) = product_of_chains(orbit.kind.parts());
    is_isomorphic(&sub, &target)
}

/// The three characteristic functions computed from the action and the poset:
/// from orbit types, from fixed-point counts, and the flag function (or its
/// image under `omega` when `dual`).
#[derive(Clone, Debug)]
pub struct FrobeniusComparison {
    pub from_orbits: crate::symfunc::SymPoly,
    pub from_character: crate::symfunc::SymPoly,
    pub from_flag: crate::symfunc::SymPoly,
}

impl FrobeniusComparison {
    pub fn all_equal(&self) -> bool {
        self.from_orbits == self.from_character && self.from_character == self.from_flag
    }
}

pub fn compare_frobenius<T, L>(
    p: &RankedPoset<T>,
    action: &LocalAction<L>,
    dual: bool,
) -> Result<FrobeniusComparison>
where
    L: Copy + Ord + Hash + Debug + Send + Sync,
{
    let flag = flag_qsym(p);
    Ok(FrobeniusComparison {
        from_orbits: action.frobenius_from_orbits(),
        from_character: frobenius_from_character(action.degree(), &action.character())?,
        from_flag: if dual { flag.omega() } else { flag },
    })
}

/// The local condition characterizing labelings whose coordinate action
/// induces a local action: for every chain prefix ending at `t` and every
/// `t'` three ranks above, the chains from `t` to `t'` split into classes
/// labeled like a product of chains (`abc` six ways, `aab` three ways, or
/// `aaa`).
pub fn verify_local_coxeter_condition<T, Lb>(p: &RankedPoset<T>, labeler: &Lb) -> Check
where
    T: Sync,
    Lb: ChainLabeler + Sync,
{
    let states = crate::labeling::reachable_states(p, labeler);
    states.par_iter().try_for_each(|(t, state)| {
        for top in p.upset(*t).filter(|&u| p.rank(u) == p.rank(*t) + 3) {
            let mut deltas: Vec<([ElemId; 2], Vec<Lb::Label>)> = Vec::new();
            for &r1 in p.upper_covers(*t) {
                for &r2 in p.upper_covers(r1) {
                    if p.covers(r2, top) {
                        let labels = labels_along(labeler, state.clone(), &[*t, r1, r2, top]).0;
                        deltas.push(([r1, r2], labels));
                    }
                }
            }
            if !partition_into_classes(&deltas) {
                return Err(Counterexample(format!(
                    "length-three chains from element {t} to {top} (state {state:?}) admit no \
                     product-of-chains partition: {:?}",
                    deltas.iter().map(|(_, l)| l).collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    })
}

/// Can the chains be split into classes, one per set of distinct
/// rearrangements of a label multiset, each labeled as the lattice of
/// submultisets (rank-`k` element determined by the first `k` labels)?
fn partition_into_classes<L: Copy + Ord>(deltas: &[([ElemId; 2], Vec<L>)]) -> bool {
    let mut groups: BTreeMap<Vec<L>, Vec<usize>> = BTreeMap::new();
    for (i, (_, labels)) in deltas.iter().enumerate() {
        let mut key = labels.clone();
        key.sort_unstable();
        groups.entry(key).or_default().push(i);
    }
    groups.into_iter().all(|(multiset, members)| {
        let perms = distinct_permutations(&multiset);
        if members.len() % perms.len() != 0 {
            return false;
        }
        let mut used = vec![false; members.len()];
        assign(deltas, &members, &perms, &mut used)
    })
}

fn assign<L: Copy + Ord>(
    deltas: &[([ElemId; 2], Vec<L>)],
    members: &[usize],
    perms: &[Vec<L>],
    used: &mut Vec<bool>,
) -> bool {
    let Some(first) = (0..members.len()).find(|&k| !used[k]) else {
        return true;
    };
    // one chain per rearrangement; the chain of `perms[0]` is forced to be
    // some unused chain with those labels, and we anchor on `first`
    let mut chosen: Vec<usize> = Vec::with_capacity(perms.len());
    let anchor = perms.iter().position(|p| *p == deltas[members[first]].1).unwrap();
    fn go<L: Copy + Ord>(
        deltas: &[([ElemId; 2], Vec<L>)],
        members: &[usize],
        perms: &[Vec<L>],
        used: &mut Vec<bool>,
        anchor: (usize, usize),
        chosen: &mut Vec<usize>,
    ) -> bool {
        let slot = chosen.len();
        if slot == perms.len() {
            if !consistent(deltas, members, perms, chosen) {
                return false;
            }
            for &k in chosen.iter() {
                used[k] = true;
            }
            if assign(deltas, members, perms, used) {
                return true;
            }
            for &k in chosen.iter() {
                used[k] = false;
            }
            return false;
        }
        let candidates: Vec<usize> = if slot == anchor.0 {
            vec![anchor.1]
        } else {
            (0..members.len())
                .filter(|&k| {
                    !used[k]
                        && k != anchor.1
                        && !chosen.contains(&k)
                        && deltas[members[k]].1 == perms[slot]
                })
                .collect()
        };
        for k in candidates {
            chosen.push(k);
            if go(deltas, members, perms, used, anchor, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(deltas, members, perms, used, (anchor, first), &mut chosen)
}

/// The rank-`k` element of each chosen chain depends only on the multiset of
/// its first `k` labels, and distinct multisets give distinct elements.
fn consistent<L: Copy + Ord>(
    deltas: &[([ElemId; 2], Vec<L>)],
    members: &[usize],
    perms: &[Vec<L>],
    chosen: &[usize],
) -> bool {
    for k in 0..2 {
        let mut by_prefix: BTreeMap<Vec<L>, ElemId> = BTreeMap::new();
        let mut by_elem: BTreeMap<ElemId, Vec<L>> = BTreeMap::new();
        for (slot, &m) in chosen.iter().enumerate() {
            let mut prefix = perms[slot][..=k].to_vec();
            prefix.sort_unstable();
            let elem = deltas[members[m]].0[k];
            if *by_prefix.entry(prefix.clone()).or_insert(elem) != elem {
                return false;
            }
            if *by_elem.entry(elem).or_insert(prefix.clone()) != prefix {
                return false;
            }
        }
    }
    true
}

fn distinct_permutations<L: Copy + Ord>(sorted: &[L]) -> Vec<Vec<L>> {
    let mut out = Vec::new();
    let mut cur = sorted.to_vec();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// A labeled poset whose labels are not injective on chains and whose
/// coordinate action is not well defined: `C_2 x C_3` with an extra element
/// squeezed between `(0,1)` and the top, so two chains read `b a b`.
/// Covers are labeled `a` when the first coordinate advances and `b`
/// otherwise.
pub fn braid_failure_fixture() -> (RankedPoset<String>, HashMap<(ElemId, ElemId), char>) {
    let names = ["00", "01", "02", "10", "11", "12", "X"];
    let covers = [
        ("00", "01", 'b'),
        ("01", "02", 'b'),
        ("00", "10", 'a'),
        ("01", "11", 'a'),
        ("02", "12", 'a'),
        ("10", "11", 'b'),
        ("11", "12", 'b'),
        ("01", "X", 'a'),
        ("X", "12", 'b'),
    ];
    let pos = |s: &str| names.iter().position(|&n| n == s).unwrap();
    let pairs: Vec<(usize, usize)> = covers.iter().map(|&(a, b, _)| (pos(a), pos(b))).collect();
    let p = RankedPoset::from_covers(names.iter().map(|s| s.to_string()).collect(), &pairs)
        .expect("fixture is graded");
    let labels = covers
        .iter()
        .map(|&(a, b, l)| {
            let (u, v) = (p.id_of(&a.to_string()).unwrap(), p.id_of(&b.to_string()).unwrap());
            ((u, v), l)
        })
        .collect();
    (p, labels)
}

/// Zero-valued classes are omitted from the table.
pub fn nonzero_character(chars: &BTreeMap<Partition, Q>) -> BTreeMap<Partition, Q> {
    chars.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k.clone(), v.clone())).collect()
}
