use super::RankedPoset;

/// Coordinates of an element of `C_{nu_1+1} x C_{nu_2+1} x ...`.
pub type ChainCoordinates = Vec<usize>;

/// The product of chains with `nu_i + 1` elements each, ordered
/// coordinatewise. The second component lists the join-irreducible label of
/// each coordinate step: coordinate `i` (1-based) repeated `nu_i` times.
pub fn product_of_chains(nu: &[usize]) -> (RankedPoset<ChainCoordinates>, Vec<usize>) {
    let nu = nu.to_vec();
    let poset = RankedPoset::build(vec![0; nu.len()], |c: &ChainCoordinates| {
        (0..nu.len())
            .filter(|&i| c[i] < nu[i])
            .map(|i| {
                let mut d = c.clone();
                d[i] += 1;
                d
            })
            .collect()
    })
    .expect("products of chains are graded with a top");
    let labels = nu.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i + 1, k)).collect();
    (poset, labels)
}

/// The coordinate that changes along a cover of a product of chains.
pub(crate) fn step_coordinate(from: &ChainCoordinates, to: &ChainCoordinates) -> usize {
    from.iter().zip(to).position(|(a, b)| a != b).expect("distinct elements")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_products() {
        let (p, labels) = product_of_chains(&[1, 1]);
        assert_eq!(p.len(), 4);
        assert_eq!(p.maximal_chain_count(), 2);
        assert_eq!(labels, vec![1, 2]);

        let (p, labels) = product_of_chains(&[2, 1]);
        assert_eq!(p.len(), 6);
        assert_eq!(p.maximal_chain_count(), 3);
        assert_eq!(labels, vec![1, 1, 2]);

        let (p, _) = product_of_chains(&[4]);
        assert_eq!(p.len(), 5);
        assert_eq!(p.maximal_chain_count(), 1);
        assert_eq!(p.height(), 4);
    }
}
