//! Brute-force oracles compared with the library's constructions.

use std::collections::{BTreeSet, HashMap};

use num_traits::ToPrimitive;
use shuffles_core::labeling::label_words;
use shuffles_core::poset::RankSet;
use shuffles_core::series::zeta_polynomial_gf;
use shuffles_core::word::{interval_decomposition, is_valid_shuffle};
use shuffles_core::{ElemId, Letter, RankedPoset, ShuffleContext, ShufflePoset, ShuffleWord};

const SMALL: [(u16, u16); 7] = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (3, 2), (2, 3)];

/// Every sequence of distinct letters, filtered by the shuffle property.
fn words_by_brute_force(ctx: ShuffleContext) -> BTreeSet<ShuffleWord> {
    let alphabet: Vec<Letter> = (1..=ctx.lower)
        .map(Letter::Lower)
        .chain((1..=ctx.upper).map(Letter::Upper))
        .collect();
    let mut found = BTreeSet::new();
    let mut stack = vec![Vec::new()];
    while let Some(seq) = stack.pop() {
        if is_valid_shuffle(&seq, ctx) {
            found.insert(ShuffleWord::new(seq.clone()).unwrap());
        }
        for &l in &alphabet {
            if !seq.contains(&l) {
                let mut next = seq.clone();
                next.push(l);
                stack.push(next);
            }
        }
    }
    found
}

fn maximal_chains<T>(p: &RankedPoset<T>) -> Vec<Vec<ElemId>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![p.bottom()]];
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        if last == p.top() {
            out.push(chain);
            continue;
        }
        for &v in p.upper_covers(last) {
            let mut next = chain.clone();
            next.push(v);
            stack.push(next);
        }
    }
    out
}

#[test]
fn elements_match_exhaustive_search() {
    for (m, n) in SMALL {
        let p = ShufflePoset::with_sizes(m, n);
        let ctx = p.context();
        let brute = words_by_brute_force(ctx);
        let built: BTreeSet<ShuffleWord> = p.poset().elements().iter().cloned().collect();
        assert_eq!(brute, built, "W({m},{n})");
    }
}

#[test]
fn order_matches_subword_deletion_and_insertion() {
    // u <= v iff v is reached from u by a sequence of covers
    let p = ShufflePoset::with_sizes(2, 2);
    let q = p.poset();
    for u in 0..q.len() as ElemId {
        let reach: BTreeSet<ElemId> = {
            let mut seen = BTreeSet::from([u]);
            let mut todo = vec![u];
            while let Some(a) = todo.pop() {
                for &b in q.upper_covers(a) {
                    if seen.insert(b) {
                        todo.push(b);
                    }
                }
            }
            seen
        };
        for v in 0..q.len() as ElemId {
            assert_eq!(q.leq(u, v), reach.contains(&v));
            assert_eq!(
                shuffles_core::word::leq(q.element(u), q.element(v)),
                reach.contains(&v),
                "{} vs {}",
                q.element(u),
                q.element(v)
            );
        }
    }
}

#[test]
fn mobius_agrees_with_alternating_chain_count() {
    for (m, n) in SMALL {
        let p = ShufflePoset::with_sizes(m, n);
        let q = p.poset();
        // chains bottom = t0 < t1 < ... < tk = top, weighted by (-1)^k
        let mut by_elem: HashMap<ElemId, i64> = HashMap::from([(q.bottom(), 1)]);
        let mut order: Vec<ElemId> = (0..q.len() as ElemId).collect();
        order.sort_by_key(|&e| q.rank(e));
        for &v in &order {
            if v == q.bottom() {
                continue;
            }
            let total: i64 = order
                .iter()
                .filter(|&&u| u != v && q.leq(u, v))
                .map(|u| -by_elem.get(u).copied().unwrap_or(0))
                .sum();
            by_elem.insert(v, total);
        }
        assert_eq!(q.mobius(q.bottom(), q.top()).unwrap(), by_elem[&q.top()], "W({m},{n})");
    }
}

#[test]
fn flag_numbers_count_restrictions_of_maximal_chains() {
    for (m, n) in [(2, 1), (2, 2), (3, 1)] {
        let p = ShufflePoset::with_sizes(m, n);
        let q = p.poset();
        let chains = maximal_chains(q);
        assert_eq!(chains.len() as u128, q.maximal_chain_count());
        let h = q.height();
        for s in RankSet::all(h) {
            let restricted: BTreeSet<Vec<ElemId>> =
                chains.iter().map(|c| s.ranks().iter().map(|&r| c[r]).collect()).collect();
            assert_eq!(q.alpha(s).unwrap(), restricted.len() as u128, "W({m},{n}) {:?}", s.ranks());
        }
    }
}

#[test]
fn multichain_counts_match_generating_function() {
    for k in 0..=3i64 {
        let gf = zeta_polynomial_gf(k, (3, 3));
        for (m, n) in SMALL {
            let p = ShufflePoset::with_sizes(m, n);
            let q = p.poset();
            // multichains bottom = t0 <= ... <= tk = top, by dynamic programming on leq
            let mut ways: Vec<u64> = (0..q.len() as ElemId).map(|v| u64::from(v == q.bottom())).collect();
            for _ in 0..k {
                ways = (0..q.len() as ElemId)
                    .map(|v| (0..q.len() as ElemId).filter(|&u| q.leq(u, v)).map(|u| ways[u]).sum())
                    .collect();
            }
            let expected = gf.coeff(m as usize, n as usize).to_integer().to_u64().unwrap();
            assert_eq!(ways[q.top()], expected, "Z({m},{n}) at k = {k}");
        }
    }
}

#[test]
fn intervals_factor_into_smaller_shuffle_posets() {
    let p = ShufflePoset::with_sizes(3, 2);
    let q = p.poset();
    let ctx = p.context();
    let mut sizes: HashMap<(usize, usize), usize> = HashMap::new();
    let mut size_of = |i: usize, j: usize| {
        *sizes.entry((i, j)).or_insert_with(|| ShufflePoset::with_sizes(i as u16, j as u16).poset().len())
    };
    for u in 0..q.len() as ElemId {
        for v in q.upset(u).collect::<Vec<_>>() {
            let f = interval_decomposition(q.element(u), q.element(v), ctx).unwrap();
            let product: usize = f.factors().iter().map(|&(i, j)| size_of(i, j)).product();
            assert_eq!(q.interval(u, v).len(), product, "[{}, {}]", q.element(u), q.element(v));
        }
    }
}

#[test]
fn increasing_chains_are_unique_per_maximal_chain_set() {
    let p = ShufflePoset::with_sizes(2, 2);
    let q = p.poset();
    let ctx = p.context();
    let increasing = maximal_chains(q)
        .into_iter()
        .filter(|c| {
            let labels = label_words(ctx, &p.words(c)).unwrap().labels;
            labels.windows(2).all(|w| w[0] < w[1])
        })
        .count();
    assert_eq!(increasing, 1);
}
