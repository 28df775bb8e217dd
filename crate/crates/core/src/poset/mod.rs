//! Finite graded posets with a bottom and a top, built by closing a cover
//! generator. Elements are addressed by dense ids; within a rank the ids
//! follow the payload order so construction is deterministic.

mod flag;
mod incidence;
mod iso;
pub(crate) mod product;

pub use flag::{FlagVectors, RankSet};
pub use incidence::IncidenceFunction;
pub use iso::{is_isomorphic, ISOMORPHISM_LIMIT};
pub use product::{product_of_chains, ChainCoordinates};

use std::collections::HashMap;
use std::fmt::{Display, Write as _};
use std::hash::Hash;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type ElemId = usize;

#[derive(Clone, Debug)]
pub struct RankedPoset<T> {
    elements: Vec<T>,
    index: HashMap<T, ElemId>,
    rank: Vec<usize>,
    up: Vec<Vec<ElemId>>,
    down: Vec<Vec<ElemId>>,
    layers: Vec<Vec<ElemId>>,
    // upset[u] contains v iff u <= v
    upset: Vec<FixedBitSet>,
    downset: Vec<FixedBitSet>,
    bottom: ElemId,
    top: ElemId,
}

impl<T: Clone + Ord + Hash> RankedPoset<T> {
    /// Close `covers` under reachability starting from `bottom`.
    pub fn build<F>(bottom: T, mut covers: F) -> Result<Self>
    where
        F: FnMut(&T) -> Vec<T>,
        T: std::fmt::Debug,
    {
        let mut rank_of: HashMap<T, usize> = HashMap::new();
        let mut layers: Vec<Vec<T>> = vec![vec![bottom.clone()]];
        let mut edges: Vec<(T, T)> = Vec::new();
        rank_of.insert(bottom, 0);
        let mut r = 0;
        while r < layers.len() {
            let mut next = Vec::new();
            for u in &layers[r] {
                for v in covers(u) {
                    match rank_of.get(&v) {
                        Some(&rv) if rv != r + 1 => {
                            return Err(Error::NotGraded(format!("{u:?} -> {v:?}")));
                        }
                        Some(_) => {}
                        None => {
                            rank_of.insert(v.clone(), r + 1);
                            next.push(v.clone());
                        }
                    }
                    edges.push((u.clone(), v));
                }
            }
            if !next.is_empty() {
                layers.push(next);
            }
            r += 1;
        }
        let elements: Vec<T> = layers
            .into_iter()
            .flat_map(|mut layer| {
                layer.sort();
                layer
            })
            .collect();
        let index: HashMap<T, ElemId> =
            elements.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let rank: Vec<usize> = elements.iter().map(|t| rank_of[t]).collect();
        let covers: Vec<(ElemId, ElemId)> =
            edges.iter().map(|(u, v)| (index[u], index[v])).collect();
        Self::assemble(elements, index, rank, &covers)
    }

    /// Build from an explicit list of payloads and cover pairs `(lower, upper)`.
    pub fn from_covers(elements: Vec<T>, covers: &[(ElemId, ElemId)]) -> Result<Self>
    where
        T: std::fmt::Debug,
    {
        let n = elements.len();
        let mut down_deg = vec![0usize; n];
        let mut up: Vec<Vec<ElemId>> = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::Invariant(format!("cover ({a},{b}) out of range")));
            }
            up[a].push(b);
            down_deg[b] += 1;
        }
        let minimal: Vec<ElemId> = (0..n).filter(|&i| down_deg[i] == 0).collect();
        if minimal.len() != 1 {
            return Err(Error::MultipleMinimal(minimal.len()));
        }
        let root = elements[minimal[0]].clone();
        let by_payload: HashMap<T, ElemId> =
            elements.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        if by_payload.len() != n {
            return Err(Error::Invariant("duplicate payloads".into()));
        }
        let built = Self::build(root, |t| {
            up[by_payload[t]].iter().map(|&j| elements[j].clone()).collect()
        })?;
        if built.len() != n {
            return Err(Error::Invariant("cover graph is not connected".into()));
        }
        Ok(built)
    }

    fn assemble(
        elements: Vec<T>,
        index: HashMap<T, ElemId>,
        rank: Vec<usize>,
        covers: &[(ElemId, ElemId)],
    ) -> Result<Self> {
        let n = elements.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in covers {
            up[a].push(b);
            down[b].push(a);
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        let maximal: Vec<ElemId> = (0..n).filter(|&i| up[i].is_empty()).collect();
        if maximal.len() != 1 {
            return Err(Error::MultipleMaximal(maximal.len()));
        }
        let top = maximal[0];
        let height = rank[top];
        let mut layers = vec![Vec::new(); height + 1];
        for (i, &r) in rank.iter().enumerate() {
            layers[r].push(i);
        }
        // ids are rank-sorted, so reverse id order is a linear extension from the top
        let mut upset = vec![FixedBitSet::with_capacity(n); n];
        for u in (0..n).rev() {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(u);
            for &v in &up[u] {
                s.union_with(&upset[v]);
            }
            upset[u] = s;
        }
        let mut downset = vec![FixedBitSet::with_capacity(n); n];
        for v in 0..n {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(v);
            for &u in &down[v] {
                s.union_with(&downset[u]);
            }
            downset[v] = s;
        }
        Ok(RankedPoset { elements, index, rank, up, down, layers, upset, downset, bottom: 0, top })
    }
}

impl<T> RankedPoset<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Rank of the top element.
    pub fn height(&self) -> usize {
        self.rank[self.top]
    }

    pub fn bottom(&self) -> ElemId {
        self.bottom
    }

    pub fn top(&self) -> ElemId {
        self.top
    }

    pub fn element(&self, id: ElemId) -> &T {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn rank(&self, id: ElemId) -> usize {
        self.rank[id]
    }

    pub fn upper_covers(&self, id: ElemId) -> &[ElemId] {
        &self.up[id]
    }

    pub fn lower_covers(&self, id: ElemId) -> &[ElemId] {
        &self.down[id]
    }

    pub fn layer(&self, r: usize) -> &[ElemId] {
        &self.layers[r]
    }

    pub fn leq(&self, u: ElemId, v: ElemId) -> bool {
        self.upset[u].contains(v)
    }

    pub fn covers(&self, u: ElemId, v: ElemId) -> bool {
        self.up[u].binary_search(&v).is_ok()
    }

    /// Elements `v` with `u <= v`, in id order (hence rank order).
    pub fn upset(&self, u: ElemId) -> impl Iterator<Item = ElemId> + '_ {
        self.upset[u].ones()
    }

    pub fn downset(&self, v: ElemId) -> impl Iterator<Item = ElemId> + '_ {
        self.downset[v].ones()
    }

    /// Elements of the closed interval `[u, v]` in rank order.
    pub fn interval(&self, u: ElemId, v: ElemId) -> Vec<ElemId> {
        let mut s = self.upset[u].clone();
        s.intersect_with(&self.downset[v]);
        s.ones().collect()
    }

    /// Number of elements at each rank.
    pub fn rank_generating_function(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// Every interval has palindromic rank counts.
    pub fn is_locally_rank_symmetric(&self) -> bool {
        (0..self.len()).all(|u| {
            self.upset(u).all(|v| {
                let base = self.rank[u];
                let mut counts = vec![0usize; self.rank[v] - base + 1];
                for t in self.interval(u, v) {
                    counts[self.rank[t] - base] += 1;
                }
                counts.iter().eq(counts.iter().rev())
            })
        })
    }

    /// Number of maximal chains, by path counting over the cover graph.
    pub fn maximal_chain_count(&self) -> u128 {
        let mut paths = vec![0u128; self.len()];
        paths[self.bottom] = 1;
        for u in 0..self.len() {
            let here = paths[u];
            for &v in &self.up[u] {
                paths[v] += here;
            }
        }
        paths[self.top]
    }

    /// Graphviz rendering of the Hasse diagram, one `rank=same` group per rank.
    pub fn to_dot<F: Fn(&T) -> String>(&self, name: &str, label: F) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        let _ = writeln!(out, "  rankdir=BT;");
        for (r, layer) in self.layers.iter().enumerate() {
            let _ = writeln!(out, "  {{ rank=same; // rank {r}");
            for &id in layer {
                let text = label(&self.elements[id]).replace('"', "\\\"");
                let _ = writeln!(out, "    n{id} [label=\"{text}\"];");
            }
            out.push_str("  }\n");
        }
        for (u, ups) in self.up.iter().enumerate() {
            for &v in ups {
                let _ = writeln!(out, "  n{u} -> n{v};");
            }
        }
        out.push_str("}\n");
        out
    }
}

impl<T: Hash + Eq> RankedPoset<T> {
    pub fn id_of(&self, payload: &T) -> Option<ElemId> {
        self.index.get(payload).copied()
    }
}

impl<T: Display> RankedPoset<T> {
    pub fn dot(&self, name: &str) -> String {
        self.to_dot(name, |t| t.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{upper_covers, ShuffleContext};

    fn shuffle_poset(m: u16, n: u16) -> RankedPoset<crate::word::ShuffleWord> {
        let ctx = ShuffleContext::new(m, n);
        RankedPoset::build(ctx.bottom(), |w| upper_covers(w, ctx)).unwrap()
    }

    #[test]
    fn element_counts() {
        assert_eq!(shuffle_poset(2, 1).len(), 12);
        assert_eq!(shuffle_poset(1, 1).len(), 5);
        for n in 0..6 {
            assert_eq!(shuffle_poset(0, n).len(), 1 << n);
        }
    }

    #[test]
    fn rank_counts() {
        assert_eq!(shuffle_poset(2, 1).rank_generating_function(), vec![1, 5, 5, 1]);
        assert_eq!(shuffle_poset(1, 1).rank_generating_function(), vec![1, 3, 1]);
        let (c22, _) = product_of_chains(&[1, 1]);
        assert_eq!(c22.rank_generating_function(), vec![1, 2, 1]);
    }

    #[test]
    fn ids_are_deterministic_and_rank_sorted() {
        let p = shuffle_poset(2, 2);
        let q = shuffle_poset(2, 2);
        assert_eq!(p.elements(), q.elements());
        for id in 1..p.len() {
            assert!(p.rank(id - 1) <= p.rank(id));
        }
        assert_eq!(p.bottom(), 0);
        assert_eq!(p.top(), p.len() - 1);
    }

    #[test]
    fn local_rank_symmetry() {
        for m in 0..=3 {
            for n in 0..=(6 - m).min(3) {
                assert!(shuffle_poset(m, n).is_locally_rank_symmetric(), "W({m},{n})");
            }
        }
        let (c32, _) = product_of_chains(&[2, 1]);
        assert!(c32.is_locally_rank_symmetric());
        // bottom < a < top alongside bottom < b < c < top' is not graded; use
        // a graded poset with ranks (1, 2, 1, 1) whose full interval is lopsided
        let p = RankedPoset::from_covers(vec![0, 1, 2, 3, 4], &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
            .unwrap();
        assert_eq!(p.rank_generating_function(), vec![1, 2, 1, 1]);
        assert!(!p.is_locally_rank_symmetric());
    }

    #[test]
    fn non_graded_and_multiple_tops_are_rejected() {
        // 0 < 1 < 2 and 0 < 2 directly
        let r = RankedPoset::from_covers(vec![0, 1, 2], &[(0, 1), (1, 2), (0, 2)]);
        assert!(matches!(r, Err(Error::NotGraded(_))));
        let r = RankedPoset::from_covers(vec![0, 1, 2], &[(0, 1), (0, 2)]);
        assert!(matches!(r, Err(Error::MultipleMaximal(2))));
    }

    #[test]
    fn comparability_matches_word_criterion() {
        let ctx = ShuffleContext::new(2, 2);
        let p = shuffle_poset(2, 2);
        for u in 0..p.len() {
            for v in 0..p.len() {
                assert_eq!(p.leq(u, v), crate::word::leq(p.element(u), p.element(v)));
            }
        }
        assert_eq!(p.height(), ctx.height());
    }

    #[test]
    fn dot_export_groups_ranks() {
        let p = shuffle_poset(1, 1);
        let dot = p.dot("W11");
        assert_eq!(dot.matches("rank=same").count(), 3);
        assert_eq!(dot.matches("->").count(), 6);
        assert!(dot.contains("label=\"x1 a1\""));
    }
}
