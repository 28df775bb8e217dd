//! The acceptance suite: ten exhaustive checks over small shuffle posets,
//! products of chains, and the series identities. Each check returns a short
//! summary on success and a counterexample on failure.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::action::{
    compare_frobenius, orbit_is_product_of_chains, verify_local_coxeter_condition, LocalAction,
};
use crate::arith::{binomial, factorial, multinomial, q, q_frac, Q};
use crate::labeling::{
    decode_label, decreasing_chain_count, verify_r, verify_r_star, verify_s, ChainSet,
    NaturalLabeler, ShuffleLabeler,
};
use crate::poset::{is_isomorphic, product_of_chains};
use crate::series::{
    classify_elements, convolve_closed_form, convolve_direct, count_by_type, count_l,
    count_l_series, l_words, product_identity, verify_l_bijection, zeta_polynomial_gf, zeta_values,
    AltLetter, BivariateSeries, MultiplicativeFunction,
};
use crate::shuffle::ShufflePoset;
use crate::symfunc::{
    check_generating_identity, check_recurrence, flag_qsym, mobius_flag_duality,
    shuffle_flag_closed_form, Partition, SymPoly,
};
use crate::word::{Letter, ShuffleWord};

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub number: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(serialize_with = "millis")]
    pub elapsed: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} {}: {} ({:.2}s) {}",
            self.number,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Verdict = Result<String, String>;

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "counting identities"),
    (2, "flag symmetry"),
    (3, "labeling properties"),
    (4, "local action"),
    (5, "Frobenius consistency"),
    (6, "generalized flag function"),
    (7, "type enumeration"),
    (8, "convolution monoid"),
    (9, "language bijection"),
    (10, "determinism and performance"),
];

/// Run one criterion by number.
pub fn run(number: u8) -> Option<Outcome> {
    let (_, title) = *CRITERIA.iter().find(|(n, _)| *n == number)?;
    let check: fn() -> Verdict = match number {
        1 => counting_identities,
        2 => flag_symmetry,
        3 => labeling_properties,
        4 => local_action,
        5 => frobenius_consistency,
        6 => generalized_flag_function,
        7 => type_enumeration,
        8 => convolution_monoid,
        9 => language_bijection,
        10 => determinism_and_performance,
        _ => return None,
    };
    let start = Instant::now();
    let verdict = check();
    let elapsed = start.elapsed();
    let (passed, detail) = match verdict {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(Outcome { number, title, passed, detail, elapsed })
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().filter_map(|&(n, _)| run(n)).collect()
}

/// Pairs `(M, N)` with `M + N <= total`.
pub fn sizes_up_to(total: u16) -> Vec<(u16, u16)> {
    (0..=total).flat_map(|s| (0..=s).map(move |m| (m, s - m))).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

/// `(M+N)! sum_k C(M,k) C(N,k) / 2^k`.
pub fn expected_chain_count(m: usize, n: usize) -> u128 {
    (0..=m.min(n)).map(|k| factorial(m + n) / (1 << k) * binomial(m, k) * binomial(n, k)).sum()
}

/// `sum_k C(M,k) C(N,k) 2^{M+N-2k}`.
pub fn expected_element_count(m: usize, n: usize) -> u128 {
    (0..=m.min(n)).map(|k| (binomial(m, k) * binomial(n, k)) << (m + n - 2 * k)).sum()
}

pub fn expected_mobius(m: usize, n: usize) -> i128 {
    let sign = if (m + n).is_multiple_of(2) { 1 } else { -1 };
    sign * binomial(m + n, m) as i128
}

fn counting_identities() -> Verdict {
    let sizes = sizes_up_to(7);
    sizes.par_iter().try_for_each(|&(m, n)| {
        let p = ShufflePoset::with_sizes(m, n);
        let (mu, nu) = (m as usize, n as usize);
        let poset = p.poset();
        let chains = poset.maximal_chain_count();
        ensure(chains == expected_chain_count(mu, nu), || {
            format!("W({m},{n}) has {chains} maximal chains, expected {}", expected_chain_count(mu, nu))
        })?;
        let moebius = poset.mobius(poset.bottom(), poset.top()).map_err(|e| e.to_string())? as i128;
        ensure(moebius == expected_mobius(mu, nu), || format!("W({m},{n}) has Moebius value {moebius}"))?;
        ensure(poset.len() as u128 == expected_element_count(mu, nu), || {
            format!("W({m},{n}) has {} elements", poset.len())
        })
    })?;
    let p = ShufflePoset::with_sizes(2, 1);
    let w21 = (p.poset().maximal_chain_count(), p.poset().mobius(p.poset().bottom(), p.poset().top()), p.poset().len());
    ensure(w21 == (12, Ok(-3), 12), || format!("W(2,1) gives {w21:?}"))?;
    Ok(format!("{} posets up to rank 7; W(2,1): 12 chains, mu = -3, 12 elements", sizes.len()))
}

fn flag_symmetry() -> Verdict {
    let sizes = sizes_up_to(6);
    sizes.par_iter().try_for_each(|&(m, n)| {
        let p = ShufflePoset::with_sizes(m, n);
        ensure(p.poset().is_locally_rank_symmetric(), || format!("W({m},{n}) has an asymmetric interval"))?;
        let f = flag_qsym(p.poset());
        f.is_symmetric().map_err(|e| format!("flag function of W({m},{n}) is not symmetric: {e:?}"))?;
        ensure(f == shuffle_flag_closed_form(m as usize, n as usize), || {
            format!("flag function of W({m},{n}) differs from the closed form")
        })
    })?;
    let f21 = flag_qsym(ShufflePoset::with_sizes(2, 1).poset());
    let m21 = f21.is_symmetric().map_err(|e| format!("{e:?}"))?;
    let expected: BTreeMap<Partition, Q> = [
        (Partition::new(vec![3]), q(1)),
        (Partition::new(vec![2, 1]), q(5)),
        (Partition::new(vec![1, 1, 1]), q(12)),
    ]
    .into();
    ensure(m21 == expected, || format!("W(2,1) expands as {m21:?}"))?;

    let keys: Vec<(usize, usize)> = (0..=4).flat_map(|m| (0..=4).map(move |n| (m, n))).collect();
    let table: BTreeMap<(usize, usize), SymPoly> = keys
        .par_iter()
        .map(|&(m, n)| ((m, n), flag_qsym(ShufflePoset::with_sizes(m as u16, n as u16).poset())))
        .collect();
    for &(m, n) in keys.iter().filter(|&&(m, n)| m >= 1 && n >= 1) {
        ensure(check_recurrence(&table, m, n), || format!("recurrence fails at ({m},{n})"))?;
    }
    ensure(check_generating_identity(&table, 4), || "generating identity fails".to_string())?;
    Ok(format!("{} posets symmetric and matching the closed form; recurrence and generating identity for M,N <= 4", sizes.len()))
}

/// Every multiset `A + 2X + (X_all - X)` with `|A| + |X| = M`, as sorted letters.
fn admissible_multisets(m: u16, n: u16) -> BTreeSet<Vec<Letter>> {
    let mut out = BTreeSet::new();
    for a_bits in 0u32..1 << m {
        for x_bits in 0u32..1 << n {
            if (a_bits.count_ones() + x_bits.count_ones()) as u16 != m {
                continue;
            }
            let mut letters: Vec<Letter> =
                (1..=m).filter(|i| a_bits >> (i - 1) & 1 == 1).map(Letter::Lower).collect();
            for j in 1..=n {
                letters.push(Letter::Upper(j));
                if x_bits >> (j - 1) & 1 == 1 {
                    letters.push(Letter::Upper(j));
                }
            }
            letters.sort();
            out.insert(letters);
        }
    }
    out
}

fn multiset_permutations(sorted: &[Letter]) -> u128 {
    let mut counts: BTreeMap<Letter, usize> = BTreeMap::new();
    for &l in sorted {
        *counts.entry(l).or_insert(0) += 1;
    }
    multinomial(sorted.len(), &counts.into_values().collect::<Vec<_>>())
}

fn labeling_properties() -> Verdict {
    let sizes = sizes_up_to(6);
    sizes.par_iter().try_for_each(|&(m, n)| {
        let p = ShufflePoset::with_sizes(m, n);
        let ctx = p.context();
        let lab = ShuffleLabeler::new(&p);
        let chains = ChainSet::enumerate(p.poset(), &lab);
        verify_s(p.poset(), &lab, &chains).map_err(|c| format!("W({m},{n}) S: {c}"))?;
        verify_r_star(p.poset(), &lab).map_err(|c| format!("W({m},{n}) R*: {c}"))?;

        let mut census: BTreeMap<Vec<Letter>, u128> = BTreeMap::new();
        for c in 0..chains.len() {
            let labels = chains.labels(c);
            let mut key = labels.to_vec();
            key.sort();
            *census.entry(key).or_insert(0) += 1;
            let decoded = decode_label(ctx, labels).map_err(|e| format!("W({m},{n}): {e}"))?;
            let words: Vec<&ShuffleWord> =
                chains.elements(c).iter().map(|&e| p.poset().element(e as usize)).collect();
            ensure(decoded.iter().eq(words.iter().copied()), || {
                format!("W({m},{n}): decoding {labels:?} gives another chain")
            })?;
        }
        let expected = admissible_multisets(m, n);
        ensure(census.keys().cloned().collect::<BTreeSet<_>>() == expected, || {
            format!("W({m},{n}): label multisets differ from the admissible ones")
        })?;
        if let Some((k, v)) = census.iter().find(|(k, v)| **v != multiset_permutations(k)) {
            return Err(format!("W({m},{n}): {v} chains for multiset {k:?}"));
        }
        let dec = decreasing_chain_count(p.poset(), &lab);
        ensure(dec as i128 == binomial((m + n) as usize, m as usize) as i128, || {
            format!("W({m},{n}) has {dec} decreasing chains")
        })
    })?;
    Ok(format!("{} posets up to rank 6: injective, R*, S, decoding round trip, multisets, decreasing chains", sizes.len()))
}

fn local_action() -> Verdict {
    let sizes = sizes_up_to(5);
    sizes.par_iter().try_for_each(|&(m, n)| {
        let p = ShufflePoset::with_sizes(m, n);
        let action = LocalAction::from_poset(p.poset(), &ShuffleLabeler::new(&p))
            .map_err(|e| format!("W({m},{n}): {e}"))?;
        action.verify_coxeter().map_err(|c| format!("W({m},{n}): {c}"))?;
        action.verify_locality().map_err(|c| format!("W({m},{n}): {c}"))?;
        verify_local_coxeter_condition(p.poset(), &ShuffleLabeler::new(&p))
            .map_err(|c| format!("W({m},{n}): {c}"))?;
        let orbits = action.orbits();
        action.verify_stabilizers(&orbits).map_err(|c| format!("W({m},{n}): {c}"))?;
        let mut by_doubled: BTreeMap<usize, u128> = BTreeMap::new();
        for orbit in &orbits {
            let k = orbit.kind.parts().iter().filter(|&&p| p == 2).count();
            ensure(orbit.kind.parts().iter().all(|&p| p <= 2), || format!("orbit of type {}", orbit.kind))?;
            *by_doubled.entry(k).or_insert(0) += 1;
            let shaped = orbit_is_product_of_chains(&action, orbit).map_err(|e| e.to_string())?;
            ensure(shaped, || format!("W({m},{n}): orbit of chain {} is not a product of chains", orbit.chains[0]))?;
        }
        for k in 0..=m.min(n) as usize {
            let expected = binomial(m as usize, k) * binomial(n as usize, k);
            let got = by_doubled.get(&k).copied().unwrap_or(0);
            ensure(got == expected, || format!("W({m},{n}): {got} orbits with {k} doubled letters"))?;
        }
        Ok::<(), String>(())
    })?;
    Ok(format!("{} posets up to rank 5: relations, locality, rank-three classes, Young stabilizers, orbit shapes and census", sizes.len()))
}

fn frobenius_consistency() -> Verdict {
    let sizes = sizes_up_to(5);
    sizes.par_iter().try_for_each(|&(m, n)| {
        let p = ShufflePoset::with_sizes(m, n);
        let action = LocalAction::from_poset(p.poset(), &ShuffleLabeler::new(&p)).map_err(|e| e.to_string())?;
        let cmp = compare_frobenius(p.poset(), &action, true).map_err(|e| e.to_string())?;
        ensure(cmp.all_equal(), || format!("W({m},{n}): characteristics disagree"))?;
        for l in Partition::all((m + n) as usize) {
            ensure(action.character_value(&l) == action.character_value_alt(&l), || {
                format!("W({m},{n}): character depends on the representative of {l}")
            })?;
        }
        Ok::<(), String>(())
    })?;
    let p = ShufflePoset::with_sizes(2, 1);
    let action = LocalAction::from_poset(p.poset(), &ShuffleLabeler::new(&p)).map_err(|e| e.to_string())?;
    let cmp = compare_frobenius(p.poset(), &action, true).map_err(|e| e.to_string())?;
    let expected = &SymPoly::h(1).pow(3) + &(&SymPoly::h(2) * &SymPoly::h(1)).scale(&q(2));
    ensure(cmp.from_orbits == expected, || "W(2,1) characteristic is not h1^3 + 2 h2 h1".into())?;

    let partitions: Vec<Partition> = (1..=6).flat_map(Partition::all).collect();
    partitions.par_iter().try_for_each(|nu| {
        let (p, _) = product_of_chains(nu.parts());
        let lab = NaturalLabeler::new(&p);
        verify_r(&p, &lab).map_err(|c| format!("chains {nu}: {c}"))?;
        let action = LocalAction::from_poset(&p, &lab).map_err(|e| e.to_string())?;
        let cmp = compare_frobenius(&p, &action, false).map_err(|e| e.to_string())?;
        ensure(cmp.all_equal(), || format!("product {nu}: characteristics disagree"))?;
        ensure(cmp.from_flag == SymPoly::h_partition(nu), || format!("product {nu}: flag function is not h_nu"))?;
        let orbits = action.orbits();
        ensure(orbits.len() == 1 && orbits[0].kind == *nu, || format!("product {nu}: orbit types differ"))?;
        let (target, _) = product_of_chains(orbits[0].kind.parts());
        ensure(is_isomorphic(&p, &target).map_err(|e| e.to_string())?, || {
            format!("product {nu}: not recovered up to isomorphism")
        })
    })?;
    Ok(format!("{} shuffle posets and {} products of chains", sizes.len(), partitions.len()))
}

fn generalized_flag_function() -> Verdict {
    let sizes = sizes_up_to(5);
    sizes.par_iter().try_for_each(|&(m, n)| {
        let (l, r) = mobius_flag_duality(ShufflePoset::with_sizes(m, n).poset());
        ensure(l == r, || format!("W({m},{n}): Moebius-weighted flag function fails duality"))
    })?;
    let mut products = 0;
    for a in 1..=5usize {
        for b in 1..=6 - a {
            let (p, _) = product_of_chains(&[a - 1, b - 1]);
            let (l, r) = mobius_flag_duality(&p);
            ensure(l == r, || format!("C{a} x C{b}: duality fails"))?;
            products += 1;
        }
    }
    Ok(format!("{} shuffle posets and {products} products of two chains", sizes.len()))
}

fn type_enumeration() -> Verdict {
    let sizes = sizes_up_to(6);
    let realized: usize = sizes
        .par_iter()
        .map(|&(m, n)| {
            let census = classify_elements(m, n).map_err(|e| e.to_string())?;
            let total: u128 = census.values().sum();
            ensure(total == expected_element_count(m as usize, n as usize), || {
                format!("W({m},{n}): census has {total} elements")
            })?;
            for (t, count) in &census {
                ensure((t.big_m(), t.big_n()) == (m as usize, n as usize), || {
                    format!("W({m},{n}): type {t:?} recovers another poset")
                })?;
                let formula = count_by_type(t).map_err(|e| e.to_string())?;
                ensure(formula == *count, || format!("W({m},{n}): type {t:?} has {count} words, formula gives {formula}"))?;
            }
            Ok(census.len())
        })
        .collect::<Result<Vec<_>, String>>()?
        .into_iter()
        .sum();
    Ok(format!("{realized} realized types over {} posets", sizes.len()))
}

fn convolution_monoid() -> Verdict {
    const T: (usize, usize) = (6, 6);
    let targets: Vec<(u16, u16)> = sizes_up_to(6);
    let mut functions = vec![
        ("zeta".to_string(), MultiplicativeFunction::zeta(T)),
        ("mu".to_string(), MultiplicativeFunction::mu(T)),
    ];
    functions.extend((0..10).map(|s| (format!("random #{s}"), MultiplicativeFunction::random(T, s))));
    let pairs: Vec<(usize, usize)> = (0..functions.len()).map(|i| (i, (i + 1) % functions.len())).collect();
    pairs.par_iter().try_for_each(|&(i, j)| {
        let ((fname, f), (gname, g)) = (&functions[i], &functions[j]);
        let closed = convolve_closed_form(f.series(), g.series()).map_err(|e| e.to_string())?;
        for &(a, b) in &targets {
            let direct = convolve_direct(f, g, a, b).map_err(|e| e.to_string())?;
            ensure(closed.coeff(a as usize, b as usize) == &direct, || {
                format!("{fname} * {gname} at ({a},{b}): closed form {} vs direct {direct}", closed.coeff(a as usize, b as usize))
            })?;
        }
        Ok::<(), String>(())
    })?;

    for (ai, bi) in [
        (vec![q(1)], vec![q(1)]),
        (vec![q(1), q_frac(-1, 2)], vec![q(2), q_frac(1, 3)]),
        (vec![q(2), q(-1), q_frac(3, 4)], vec![q_frac(1, 2), q(3), q(-2)]),
    ] {
        let iterated = ai
            .iter()
            .zip(&bi)
            .map(|(a, b)| BivariateSeries::geometric(T, a, b))
            .try_fold(None::<BivariateSeries>, |acc, s| match acc {
                None => Ok(Some(s)),
                Some(acc) => convolve_closed_form(&acc, &s).map(Some),
            })
            .map_err(|e| e.to_string())?
            .expect("nonempty");
        let rhs = product_identity(&ai, &bi, T).map_err(|e| e.to_string())?;
        ensure(iterated == rhs, || format!("product identity fails for {} factors", ai.len()))?;
    }

    for k in -1..=4i64 {
        let gf = zeta_polynomial_gf(k, (2, 2));
        let oracle = zeta_values(1, 1, k);
        ensure(gf.coeff(1, 1) == &oracle && oracle == q((3 * k * k - k) / 2), || {
            format!("Z(1,1)({k}): series {} vs poset {oracle}", gf.coeff(1, 1))
        })?;
    }
    // the opposite sign on the xy term already disagrees at k = 2
    let minus = BivariateSeries::polynomial((2, 2), &[(0, 0, q(1)), (1, 0, q(-2)), (0, 1, q(-2)), (1, 1, q(-3))])
        .reciprocal()
        .map_err(|e| e.to_string())?;
    ensure(minus.coeff(1, 1) != &zeta_values(1, 1, 2), || "sign convention is not pinned".into())?;

    let (a, b, c) = (
        MultiplicativeFunction::random((5, 5), 41),
        MultiplicativeFunction::random((5, 5), 42),
        MultiplicativeFunction::random((5, 5), 43),
    );
    let conv = |x: &BivariateSeries, y: &BivariateSeries| convolve_closed_form(x, y).map_err(|e| e.to_string());
    let left = conv(&conv(a.series(), b.series())?, c.series())?;
    let right = conv(a.series(), &conv(b.series(), c.series())?)?;
    ensure(left == right, || "convolution is not associative on the random triple".into())?;
    ensure(!left.coeff(0, 0).is_zero(), || "degenerate triple".into())?;
    Ok(format!("{} pairs against the direct sum over {} posets; product identity for k <= 3; zeta values for -1 <= k <= 4; associativity", pairs.len(), targets.len()))
}

fn language_bijection() -> Verdict {
    let mut checked = 0;
    for (m, n) in sizes_up_to(4) {
        for steps in 1..=(m + n) as usize + 1 {
            verify_l_bijection(m, n, steps).map_err(|e| e.to_string())?;
            checked += 1;
        }
    }
    let letters = [AltLetter::A(1), AltLetter::A(1), AltLetter::B(1), AltLetter::B(2)];
    let words = l_words(&letters);
    let named = vec![
        vec![AltLetter::B(1), AltLetter::B(2), AltLetter::A(1), AltLetter::A(1)],
        vec![AltLetter::B(2), AltLetter::B(1), AltLetter::A(1), AltLetter::A(1)],
    ];
    ensure(words == named && count_l(&letters) == 2 && count_l_series(&letters) == 2, || {
        format!("a1^2 b1 b2 gives {words:?}")
    })?;
    Ok(format!("{checked} (M, N, steps) cases; a1^2 b1 b2 has exactly the two expected words"))
}

fn determinism_and_performance() -> Verdict {
    let start = Instant::now();
    let p = ShufflePoset::with_sizes(4, 4);
    let action = LocalAction::from_poset(p.poset(), &ShuffleLabeler::new(&p)).map_err(|e| e.to_string())?;
    let orbits = action.orbits();
    let elapsed = start.elapsed();
    ensure(action.len() == 808_920, || format!("W(4,4) has {} chains", action.len()))?;
    let expected_orbits: u128 = (0..=4).map(|k| binomial(4, k) * binomial(4, k)).sum();
    ensure(orbits.len() as u128 == expected_orbits, || format!("W(4,4) has {} orbits", orbits.len()))?;
    let sizes_ok = orbits.iter().all(|o| {
        let stab: u128 = o.kind.parts().iter().map(|&p| factorial(p)).product();
        o.chains.len() as u128 * stab == factorial(8)
    });
    ensure(sizes_ok, || "W(4,4) orbit sizes are not n!/nu!".into())?;
    ensure(elapsed < Duration::from_secs(60), || format!("W(4,4) orbits took {:.1}s", elapsed.as_secs_f64()))?;

    let report = |m, n| -> Result<String, String> {
        let p = ShufflePoset::with_sizes(m, n);
        let a = LocalAction::from_poset(p.poset(), &ShuffleLabeler::new(&p)).map_err(|e| e.to_string())?;
        serde_json::to_string(&a.orbits()).map_err(|e| e.to_string())
    };
    ensure(report(3, 2)? == report(3, 2)?, || "orbit report of W(3,2) differs between runs".into())?;
    Ok(format!("W(4,4): 808920 chains, {} orbits in {:.2}s; repeated reports identical", orbits.len(), elapsed.as_secs_f64()))
}
