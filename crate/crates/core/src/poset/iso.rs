use super::{ElemId, RankedPoset};
use crate::error::{Error, Result};

pub const ISOMORPHISM_LIMIT: usize = 4096;

/// Graded-poset isomorphism by backtracking over rank layers. Elements are
/// matched in id order (rank order), so every lower cover is already mapped
/// when an element is placed and the cover sets can be compared directly.
pub fn is_isomorphic<S, T>(p: &RankedPoset<S>, q: &RankedPoset<T>) -> Result<bool> {
    let size = p.len().max(q.len());
    if size > ISOMORPHISM_LIMIT {
        return Err(Error::TooLarge { size, limit: ISOMORPHISM_LIMIT });
    }
    if p.len() != q.len() || p.rank_generating_function() != q.rank_generating_function() {
        return Ok(false);
    }
    let signature = |up: usize, down: usize, r: usize| (r, up, down);
    let mut sp: Vec<_> = (0..p.len())
        .map(|i| signature(p.upper_covers(i).len(), p.lower_covers(i).len(), p.rank(i)))
        .collect();
    let mut sq: Vec<_> = (0..q.len())
        .map(|i| signature(q.upper_covers(i).len(), q.lower_covers(i).len(), q.rank(i)))
        .collect();
    let p_sig = sp.clone();
    let q_sig = sq.clone();
    sp.sort_unstable();
    sq.sort_unstable();
    if sp != sq {
        return Ok(false);
    }
    let mut map: Vec<Option<ElemId>> = vec![None; p.len()];
    let mut used = vec![false; q.len()];
    Ok(extend(p, q, &p_sig, &q_sig, 0, &mut map, &mut used))
}

fn extend<S, T>(
    p: &RankedPoset<S>,
    q: &RankedPoset<T>,
    p_sig: &[(usize, usize, usize)],
    q_sig: &[(usize, usize, usize)],
    next: ElemId,
    map: &mut Vec<Option<ElemId>>,
    used: &mut Vec<bool>,
) -> bool {
    if next == p.len() {
        return true;
    }
    let mut image: Vec<ElemId> =
        p.lower_covers(next).iter().map(|&d| map[d].expect("lower covers come first")).collect();
    image.sort_unstable();
    for &cand in q.layer(p.rank(next)) {
        if used[cand] || q_sig[cand] != p_sig[next] || q.lower_covers(cand) != image.as_slice() {
            continue;
        }
        map[next] = Some(cand);
        used[cand] = true;
        if extend(p, q, p_sig, q_sig, next + 1, map, used) {
            return true;
        }
        map[next] = None;
        used[cand] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::product_of_chains;
    use crate::word::{upper_covers, ShuffleContext};

    #[test]
    fn shuffle_posets_against_known_shapes() {
        let ctx = ShuffleContext::new(1, 1);
        let w11 = RankedPoset::build(ctx.bottom(), |w| upper_covers(w, ctx)).unwrap();
        let (c3, _) = product_of_chains(&[2]);
        assert!(!is_isomorphic(&w11, &c3).unwrap());
        // the rank-2 lattice with three atoms
        let pi3 = RankedPoset::from_covers(
            vec![0, 1, 2, 3, 4],
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
        )
        .unwrap();
        assert!(is_isomorphic(&w11, &pi3).unwrap());
        assert!(is_isomorphic(&w11, &w11).unwrap());

        for n in 1..=4 {
            let ctx = ShuffleContext::new(0, n);
            let boolean = RankedPoset::build(ctx.bottom(), |w| upper_covers(w, ctx)).unwrap();
            let (cube, _) = product_of_chains(&vec![1; n as usize]);
            assert!(is_isomorphic(&boolean, &cube).unwrap());
        }
    }

    #[test]
    fn same_rank_counts_but_different_covers() {
        // both have rank counts (1,2,2,1); in the second poset each middle
        // element covers both atoms
        let (c32, _) = product_of_chains(&[2, 1]);
        let other = RankedPoset::from_covers(
            vec![0, 1, 2, 3, 4, 5],
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        assert_eq!(c32.rank_generating_function(), other.rank_generating_function());
        assert!(!is_isomorphic(&c32, &other).unwrap());
    }
}
