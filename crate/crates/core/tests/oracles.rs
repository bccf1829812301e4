//! Cross-checks of the library against small, independent re-implementations.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quiverkit::checks::row_components;
use quiverkit::mutation::poly::Poly;
use quiverkit::mutation::{
    enumerate_cluster_variables, is_laurent, ExchangeMatrix, LaurentFraction,
};
use quiverkit::orbit::orbit_count;
use quiverkit::{
    enumerate_angulations, gamma, is_sectional, orbit_quiver, power, Path, TranslationQuiver,
    VertexId, ZAVertex, ZA,
};

/// Pairs `(i, j)`, `1 <= i < j <= size`, cutting the polygon into two
/// pieces whose boundary lengths are both `1 mod m` and at least `m + 1`.
fn brute_m_diagonals(size: u32, m: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 1..=size {
        for j in (i + 1)..=size {
            let a = j - i;
            let b = size - a;
            if a > m && b > m && a % m == 1 % m && b % m == 1 % m {
                out.push((i, j));
            }
        }
    }
    out
}

fn strictly_interleaved(a: (u32, u32), b: (u32, u32)) -> bool {
    let inside = |x: u32| a.0 < x && x < a.1;
    let shared = a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
    !shared && inside(b.0) != inside(b.1)
}

/// Every maximal non-crossing subset, by plain subset recursion.
fn brute_angulations(size: u32, m: u32) -> BTreeSet<Vec<(u32, u32)>> {
    let ds = brute_m_diagonals(size, m);
    let mut all = Vec::new();
    fn grow(
        ds: &[(u32, u32)],
        at: usize,
        chosen: &mut Vec<(u32, u32)>,
        all: &mut Vec<Vec<(u32, u32)>>,
    ) {
        if at == ds.len() {
            all.push(chosen.clone());
            return;
        }
        grow(ds, at + 1, chosen, all);
        if chosen.iter().all(|&c| !strictly_interleaved(c, ds[at])) {
            chosen.push(ds[at]);
            grow(ds, at + 1, chosen, all);
            chosen.pop();
        }
    }
    grow(&ds, 0, &mut Vec::new(), &mut all);
    all.into_iter()
        .filter(|set| {
            ds.iter()
                .all(|d| set.contains(d) || set.iter().any(|&c| strictly_interleaved(c, *d)))
        })
        .collect()
}

fn catalan(n: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for k in 1..=n {
        c.push((0..k).map(|i| c[i] * c[k - 1 - i]).sum());
    }
    c
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn parse_pair(label: &str) -> (u32, u32) {
    let inner = label.trim_start_matches('(').trim_end_matches(')');
    let (a, b) = inner.split_once(',').unwrap();
    (a.parse().unwrap(), b.parse().unwrap())
}

#[test]
fn m_diagonals_match_brute_force() {
    for m in 1..=4u32 {
        for n in 2..=(14 / m) {
            let size = n * m + 2;
            if size > 14 {
                continue;
            }
            let brute = brute_m_diagonals(size, m);
            assert_eq!(brute.len() as u32, (n - 1) * (n * m + 2) / 2);
            let g = gamma(n, m).unwrap();
            let built: BTreeSet<(u32, u32)> =
                g.quiver().labels().iter().map(|l| parse_pair(l)).collect();
            assert_eq!(built, brute.into_iter().collect(), "({n},{m})");
        }
    }
}

#[test]
fn diagonal_count_of_polygon() {
    for n in 2..=12u32 {
        let size = n + 2;
        assert_eq!(gamma(n, 1).unwrap().len() as u32, size * (size - 3) / 2);
    }
}

#[test]
fn angulations_match_subset_enumeration() {
    for (n, m) in [
        (2, 1),
        (3, 1),
        (4, 1),
        (5, 1),
        (6, 1),
        (2, 2),
        (3, 2),
        (2, 3),
    ] {
        let found: BTreeSet<Vec<(u32, u32)>> = enumerate_angulations(n, m)
            .unwrap()
            .iter()
            .map(|set| set.iter().map(|d| d.endpoints()).collect())
            .collect();
        assert_eq!(found, brute_angulations(n * m + 2, m), "({n},{m})");
    }
}

#[test]
fn triangulations_follow_the_catalan_recurrence() {
    let c = catalan(8);
    for n in 2..=8u32 {
        assert_eq!(
            enumerate_angulations(n, 1).unwrap().len() as u64,
            c[n as usize],
            "n = {n}"
        );
    }
}

#[test]
fn m_angulations_follow_the_fuss_catalan_formula() {
    for (n, m) in [(2u64, 2u64), (3, 2), (4, 2), (2, 3), (3, 3), (4, 3), (2, 4)] {
        let expected = binomial((m + 1) * n, n) / (m * n + 1);
        let found = enumerate_angulations(n as u32, m as u32).unwrap();
        assert_eq!(found.len() as u64, expected, "({n},{m})");
        assert!(found.iter().all(|set| set.len() as u64 == n - 1));
    }
}

/// Number of sectional paths of length `len` between each ordered pair,
/// enumerating explicit vertex sequences.
fn brute_sectional_counts(tq: &TranslationQuiver, len: u32) -> BTreeMap<(usize, usize), u32> {
    let q = tq.quiver();
    let mut counts = BTreeMap::new();
    fn walk(
        tq: &TranslationQuiver,
        path: &mut Vec<VertexId>,
        len: u32,
        counts: &mut BTreeMap<(usize, usize), u32>,
    ) {
        if path.len() as u32 == len + 1 {
            *counts
                .entry((path[0].0, path[path.len() - 1].0))
                .or_insert(0) += 1;
            return;
        }
        let last = *path.last().unwrap();
        let succ: Vec<(VertexId, u32)> = tq.quiver().successors(last).collect();
        for (next, mult) in succ {
            if path.len() >= 2 && tq.tau(next) == Some(path[path.len() - 2]) {
                continue;
            }
            for _ in 0..mult {
                path.push(next);
                walk(tq, path, len, counts);
                path.pop();
            }
        }
    }
    for v in q.vertices() {
        walk(tq, &mut vec![v], len, &mut counts);
    }
    counts
}

#[test]
fn power_multiplicities_count_sectional_paths() {
    for n in 2..=8u32 {
        let g = gamma(n, 1).unwrap();
        for m in 1..=4u32 {
            let pq = power(&g, m).unwrap();
            let built: BTreeMap<(usize, usize), u32> = pq
                .result
                .quiver()
                .arrows()
                .map(|(s, t, c)| ((s.0, t.0), c))
                .collect();
            assert_eq!(built, brute_sectional_counts(&g, m), "({n},1)^{m}");
            assert!(pq.result.quiver().max_multiplicity() <= 1, "({n},1)^{m}");
            assert_eq!(pq.result.len(), g.len());
        }
    }
}

#[test]
fn sectional_predicate_agrees_with_definition() {
    let g = gamma(5, 1).unwrap();
    let q = g.quiver();
    for a in q.vertices() {
        for (b, _) in q.successors(a) {
            for (c, _) in q.successors(b) {
                let p = Path::new(&g, vec![a, b, c]).unwrap();
                assert_eq!(is_sectional(&p, &g), g.tau(c) != Some(a));
            }
        }
    }
}

fn za_shift(k: u32, v: (i64, u32)) -> (i64, u32) {
    (v.0 + v.1 as i64, k + 1 - v.1)
}

/// `tau^-s o [r]` applied to a vertex of `ZA_k`, written out directly.
fn za_g(k: u32, s: u32, r: u32, mut v: (i64, u32)) -> (i64, u32) {
    for _ in 0..r {
        v = za_shift(k, v);
    }
    (v.0 + s as i64, v.1)
}

/// Orbits of `g` counted by their first vertex with non-negative slice:
/// the images of negative-slice vertices that land at slice `>= 0`. `g`
/// moves slices forward by at most `s + r*k`, so only preimages within that
/// distance matter.
fn brute_orbit_count(k: u32, s: u32, r: u32) -> usize {
    let reach = (s + r * k) as i64;
    (-reach..0)
        .flat_map(|p| (1..=k).map(move |i| (p, i)))
        .map(|v| za_g(k, s, r, v))
        .filter(|v| v.0 >= 0)
        .collect::<HashSet<_>>()
        .len()
}

#[test]
fn orbit_counts_match_fundamental_domain() {
    for k in 1..=6u32 {
        for r in 0..=4u32 {
            for s in 0..=6u32 {
                if r == 0 && s == 0 {
                    continue;
                }
                let expected = brute_orbit_count(k, s, r);
                assert_eq!(orbit_count(k, s, r).unwrap(), expected, "k={k} s={s} r={r}");
                assert_eq!(
                    orbit_quiver(k, s, r).unwrap().quotient.len(),
                    expected,
                    "k={k} s={s} r={r}"
                );
            }
        }
    }
}

#[test]
fn shift_identities_on_windows() {
    for k in 1..=8u32 {
        let za = ZA::new(k).unwrap();
        let width = 3 * (k as i64 + 1);
        for p in -width..width {
            for i in 1..=k {
                let v = ZAVertex::new(p, i);
                let twice = za.shift(za.shift(v));
                assert_eq!(twice, ZAVertex::new(p + k as i64 + 1, i));
                assert_eq!(za.shift(za.tau(v)), za.tau(za.shift(v)));
                assert_eq!(
                    za.shift(v),
                    ZAVertex::new(za_shift(k, (p, i)).0, za_shift(k, (p, i)).1)
                );
                for w in za.arrows_from(v) {
                    assert!(za.has_arrow(za.shift(v), za.shift(w)));
                }
            }
        }
    }
}

#[test]
fn orbit_quiver_one_one_counts_almost_positive_roots() {
    for k in 1..=6u32 {
        let oq = orbit_quiver(k, 1, 1).unwrap();
        assert_eq!(oq.quotient.len() as u32, k * (k + 3) / 2);
        assert_eq!(oq.quotient.len(), gamma(k + 1, 1).unwrap().len());
    }
}

#[test]
fn every_builder_validates() {
    for m in 1..=4u32 {
        for n in 2..=(12 / m) {
            let res = gamma(n, m).unwrap().validate();
            assert!(res.passed() && res.stable, "({n},{m})");
        }
    }
    for k in 1..=5 {
        for (s, r) in [(1, 0), (0, 1), (1, 1), (2, 1), (0, 2), (3, 2), (1, 3)] {
            let res = orbit_quiver(k, s, r).unwrap().quotient.validate();
            assert!(res.passed() && res.stable, "k={k} s={s} r={r}");
        }
    }
}

#[test]
fn odd_powers_keep_rows_together() {
    for (n, m) in [(2, 1), (6, 1), (2, 3), (3, 3), (4, 3), (2, 5)] {
        for (row, parts) in row_components(n, m).unwrap() {
            assert_eq!(parts.len(), 1, "({n},{m}) row {row}");
        }
    }
}

#[test]
fn even_powers_split_rows_at_most_in_two() {
    for (n, m) in [
        (2, 2),
        (3, 2),
        (4, 2),
        (5, 2),
        (6, 2),
        (2, 4),
        (3, 4),
        (2, 6),
    ] {
        for (row, parts) in row_components(n, m).unwrap() {
            assert!(parts.len() <= 2, "({n},{m}) row {row} meets {parts:?}");
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize) -> Poly {
    let terms = (0..rng.gen_range(1..=3)).map(|_| {
        let exps: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=2)).collect();
        (exps, BigInt::from(rng.gen_range(-3i64..=3)))
    });
    let p = Poly::from_terms(nvars, terms);
    if p.is_zero() {
        Poly::one(nvars)
    } else {
        p
    }
}

/// Exact value of `f` at `point`, or `None` where a denominator vanishes.
fn value(f: &LaurentFraction, point: &[BigInt]) -> Option<(BigInt, BigInt)> {
    let d = f.denominator().eval(point);
    (d != BigInt::from(0)).then(|| (f.numerator().eval(point), d))
}

fn same_rational(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> bool {
    &a.0 * &b.1 == &b.0 * &a.1
}

#[test]
fn fraction_arithmetic_matches_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let nvars = 3;
    for _ in 0..150 {
        let a = LaurentFraction::new(random_poly(&mut rng, nvars), random_poly(&mut rng, nvars));
        let b = LaurentFraction::new(random_poly(&mut rng, nvars), random_poly(&mut rng, nvars));
        let sum = a.add(&b);
        let prod = a.mul(&b);
        for _ in 0..4 {
            let point: Vec<BigInt> = (0..nvars)
                .map(|_| BigInt::from(rng.gen_range(-5i64..=5)))
                .collect();
            let (Some(va), Some(vb)) = (value(&a, &point), value(&b, &point)) else {
                continue;
            };
            let expected_sum = (&va.0 * &vb.1 + &vb.0 * &va.1, &va.1 * &vb.1);
            let expected_prod = (&va.0 * &vb.0, &va.1 * &vb.1);
            if let Some(v) = value(&sum, &point) {
                assert!(same_rational(&v, &expected_sum), "{a} + {b} = {sum}");
            }
            if let Some(v) = value(&prod, &point) {
                assert!(same_rational(&v, &expected_prod), "{a} * {b} = {prod}");
            }
        }
    }
}

#[test]
fn type_a_counts_follow_polygon_diagonals() {
    for (n, expected) in [(1usize, 2usize), (2, 5), (3, 9), (4, 14), (5, 20)] {
        let found = enumerate_cluster_variables(&ExchangeMatrix::path_a(n), 100_000);
        assert!(!found.cap_reached);
        assert_eq!(found.variables.len(), expected, "A_{n}");
        assert_eq!(expected, (n + 3) * n / 2);
        assert!(found.variables.iter().all(is_laurent));
    }
}

#[test]
fn a3_count_is_orientation_independent() {
    let linear = ExchangeMatrix::new(vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
    let sink = ExchangeMatrix::new(vec![vec![0, 1, 0], vec![-1, 0, -1], vec![0, 1, 0]]).unwrap();
    for m in [linear, sink] {
        assert_eq!(enumerate_cluster_variables(&m, 10_000).variables.len(), 9);
    }
}

#[test]
fn non_finite_type_hits_the_cap() {
    let kronecker = ExchangeMatrix::new(vec![vec![0, 2], vec![-2, 0]]).unwrap();
    let found = enumerate_cluster_variables(&kronecker, 20);
    assert!(found.cap_reached);
    assert!(found.variables.iter().all(is_laurent));
}
