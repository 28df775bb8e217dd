use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Partition, SymPoly};
use crate::arith::{binomial, q_from_u128, Q};
use crate::error::{Error, Result};
use crate::poset::{IncidenceFunction, RankSet, RankedPoset};

/// `F_P = sum_S alpha_P(S) M_{comp(S)}`.
pub fn flag_qsym<T>(p: &RankedPoset<T>) -> SymPoly {
    let n = p.height();
    let mut f = SymPoly::zero(n);
    for s in RankSet::all(n) {
        f.add_term(s.composition(), q_from_u128(p.alpha(s).expect("rank set in range")));
    }
    f
}

/// `F_P(phi) = sum_S alpha_P(phi, S) M_{comp(S)}`.
pub fn flag_qsym_weighted<T>(p: &RankedPoset<T>, phi: &IncidenceFunction) -> SymPoly {
    let n = p.height();
    let mut f = SymPoly::zero(n);
    for s in RankSet::all(n) {
        f.add_term(s.composition(), p.alpha_weighted(phi, s).expect("rank set in range"));
    }
    f
}

/// `sum_nu h_nu` over the orbit types.
pub fn frobenius_from_orbit_types(n: usize, types: &[Partition]) -> SymPoly {
    types.iter().fold(SymPoly::zero(n), |acc, nu| &acc + &SymPoly::h_partition(nu))
}

/// `sum_lambda psi(lambda) / z_lambda * p_lambda`; every `M`-coefficient of
/// the result is required to be an integer.
pub fn frobenius_from_character(n: usize, values: &BTreeMap<Partition, Q>) -> Result<SymPoly> {
    let mut ch = SymPoly::zero(n);
    for lambda in Partition::all(n) {
        let psi = values.get(&lambda).ok_or_else(|| Error::MissingClass(lambda.parts().to_vec()))?;
        if psi.is_zero() {
            continue;
        }
        let weight = psi / q_from_u128(lambda.z());
        ch = &ch + &SymPoly::p_partition(&lambda).scale(&weight);
    }
    if let Some((alpha, c)) = ch.terms().find(|(_, c)| !c.is_integer()) {
        return Err(Error::Invariant(format!("non-integral coefficient {c} at M{alpha:?}")));
    }
    Ok(ch)
}

/// `sum_k C(M,k) C(N,k) e_2^k e_1^{M+N-2k}`.
pub fn shuffle_flag_closed_form(m: usize, n: usize) -> SymPoly {
    let (e1, e2) = (SymPoly::e(1), SymPoly::e(2));
    (0..=m.min(n)).fold(SymPoly::zero(m + n), |acc, k| {
        let c = q_from_u128(binomial(m, k) * binomial(n, k));
        &acc + &(&e2.pow(k) * &e1.pow(m + n - 2 * k)).scale(&c)
    })
}

/// `F_{M,N} = (F_{M-1,N} + F_{M,N-1}) e_1 - F_{M-1,N-1} (e_2 + p_2)` for a
/// table of flag functions indexed by `(M, N)`, at one entry with `M, N >= 1`.
pub fn check_recurrence(table: &BTreeMap<(usize, usize), SymPoly>, m: usize, n: usize) -> bool {
    let get = |i, j| table.get(&(i, j));
    let (Some(f), Some(a), Some(b), Some(c)) =
        (get(m, n), get(m - 1, n), get(m, n - 1), get(m - 1, n - 1))
    else {
        return false;
    };
    let e1 = SymPoly::e(1);
    let rhs = &(&(a + b) * &e1) - &(c * &(&SymPoly::e(2) + &SymPoly::p(2)));
    *f == rhs
}

/// `(sum F_{MN} u^M v^N) ((1 - u e_1)(1 - v e_1) - u v e_2) = 1`, coefficient
/// by coefficient for `M, N <= bound`.
pub fn check_generating_identity(table: &BTreeMap<(usize, usize), SymPoly>, bound: usize) -> bool {
    let e1 = SymPoly::e(1);
    let e1sq_minus_e2 = &e1.pow(2) - &SymPoly::e(2);
    for m in 0..=bound {
        for n in 0..=bound {
            let get = |i: Option<usize>, j: Option<usize>| match (i, j) {
                (Some(i), Some(j)) => table.get(&(i, j)).cloned(),
                _ => Some(SymPoly::zero(m + n)),
            };
            let (Some(f), Some(a), Some(b), Some(c)) = (
                get(Some(m), Some(n)),
                get(m.checked_sub(1), Some(n)),
                get(Some(m), n.checked_sub(1)),
                get(m.checked_sub(1), n.checked_sub(1)),
            ) else {
                return false;
            };
            let coeff = &(&(&f - &(&e1 * &a)) - &(&e1 * &b)) + &(&e1sq_minus_e2 * &c);
            let expected = if m == 0 && n == 0 { SymPoly::one() } else { SymPoly::zero(m + n) };
            if coeff != expected {
                return false;
            }
        }
    }
    true
}

/// `F_P(mu) = (-1)^n omega F_P(zeta)`; returns both sides.
pub fn mobius_flag_duality<T>(p: &RankedPoset<T>) -> (SymPoly, SymPoly) {
    let lhs = flag_qsym_weighted(p, &IncidenceFunction::mobius(p));
    let sign = if p.height().is_multiple_of(2) { Q::one() } else { -Q::one() };
    let rhs = flag_qsym(p).omega().scale(&sign);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::poset::product_of_chains;
    use crate::shuffle::ShufflePoset;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec())
    }

    #[test]
    fn flag_function_of_w21() {
        let p = ShufflePoset::with_sizes(2, 1);
        let f = flag_qsym(p.poset());
        let m = f.is_symmetric().unwrap();
        assert_eq!(m[&part(&[3])], q(1));
        assert_eq!(m[&part(&[2, 1])], q(5));
        assert_eq!(m[&part(&[1, 1, 1])], q(12));
        assert_eq!(f, shuffle_flag_closed_form(2, 1));
        assert_eq!(f.coeff(&[3]), q(1));
    }

    #[test]
    fn flag_function_of_w11() {
        let p = ShufflePoset::with_sizes(1, 1);
        let m = flag_qsym(p.poset()).is_symmetric().unwrap();
        assert_eq!(m[&part(&[2])], q(1));
        assert_eq!(m[&part(&[1, 1])], q(3));
        assert_eq!(shuffle_flag_closed_form(0, 4), SymPoly::e(1).pow(4));
    }

    #[test]
    fn weighted_flag_function_with_zeta_is_plain() {
        let p = ShufflePoset::with_sizes(2, 1);
        let z = IncidenceFunction::zeta(p.poset());
        assert_eq!(flag_qsym_weighted(p.poset(), &z), flag_qsym(p.poset()));
    }

    #[test]
    fn frobenius_constructions_agree() {
        let orbits = frobenius_from_orbit_types(3, &[part(&[1, 1, 1]), part(&[2, 1]), part(&[2, 1])]);
        let expected = &SymPoly::h(1).pow(3) + &(&SymPoly::h(2) * &SymPoly::h(1)).scale(&q(2));
        assert_eq!(orbits, expected);
        let chars: BTreeMap<Partition, Q> =
            [(part(&[1, 1, 1]), q(12)), (part(&[2, 1]), q(2)), (part(&[3]), q(0))].into();
        assert_eq!(frobenius_from_character(3, &chars).unwrap(), expected);

        let regular: BTreeMap<Partition, Q> = [(part(&[1, 1]), q(2)), (part(&[2]), q(0))].into();
        assert_eq!(frobenius_from_character(2, &regular).unwrap(), SymPoly::h(1).pow(2));
        assert!(frobenius_from_character(2, &[(part(&[2]), q(0))].into()).is_err());
        assert!(frobenius_from_orbit_types(3, &[]).is_zero());
    }

    #[test]
    fn recurrence_on_closed_forms() {
        let table: BTreeMap<_, _> = (0..=3)
            .flat_map(|m| (0..=3).map(move |n| ((m, n), shuffle_flag_closed_form(m, n))))
            .collect();
        assert!(check_recurrence(&table, 2, 2));
        assert!(check_recurrence(&table, 3, 1));
        assert!(check_generating_identity(&table, 3));
        let mut broken = table.clone();
        broken.insert((1, 1), SymPoly::e(1).pow(2));
        assert!(!check_recurrence(&broken, 1, 1));
        assert!(!check_generating_identity(&broken, 3));
    }

    #[test]
    fn duality_small_cases() {
        let p = ShufflePoset::with_sizes(2, 1);
        let (l, r) = mobius_flag_duality(p.poset());
        assert_eq!(l, r);
        let (c22, _) = product_of_chains(&[1, 1]);
        let (l, r) = mobius_flag_duality(&c22);
        assert_eq!(l, r);
        let (chain, _) = product_of_chains(&[4]);
        let (l, r) = mobius_flag_duality(&chain);
        assert_eq!(l, r);
        assert_eq!(l, SymPoly::e(4));
    }
}
