//! Shared oracles and randomized invariant checks for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use sqtile::chart::Chart;
use sqtile::linear::{affine_solution, dot, qi, solve, Equation, LinearSystem, Q};
use sqtile::map::{edge_of, twin};
use sqtile::quadgen::{enumerate_quadrangulations, QuadClass};
use sqtile::PlanarMap;

pub const TRIALS: u32 = 1000;

/// Every Q2 map with 6 to 12 faces, generated once.
pub fn corpus() -> &'static [PlanarMap] {
    static MAPS: OnceLock<Vec<PlanarMap>> = OnceLock::new();
    MAPS.get_or_init(|| {
        (6..=12).flat_map(|f| enumerate_quadrangulations(f, QuadClass::Q2)).map(|n| n.map).collect()
    })
}

/// Dart bijections of `map` built by walking from dart 0, independent of
/// the library's isomorphism search.
pub fn brute_automorphisms(map: &PlanarMap) -> Vec<(Vec<usize>, bool)> {
    let n = map.n_darts();
    let mut out = Vec::new();
    for start in 0..n {
        for reversing in [false, true] {
            let mut f = vec![usize::MAX; n];
            let mut stack = vec![(0, start)];
            let mut ok = true;
            while let Some((d, e)) = stack.pop() {
                if f[d] != usize::MAX {
                    ok &= f[d] == e;
                    continue;
                }
                if f.contains(&e) {
                    ok = false;
                    break;
                }
                f[d] = e;
                let rot = if reversing { map.prev(e) } else { map.next(e) };
                stack.push((map.next(d), rot));
                stack.push((twin(d), twin(e)));
            }
            if ok && f.iter().all(|&x| x != usize::MAX) {
                out.push((f, reversing));
            }
        }
    }
    out
}

/// Decorated automorphisms of a chart and the number of face orbits they
/// induce, from the brute-force dart bijections above.
pub fn brute_face_orbits(chart: &Chart) -> (usize, usize) {
    let m = chart.map();
    let face_of = m.face_of_darts();
    let kept: Vec<_> = brute_automorphisms(m)
        .into_iter()
        .filter(|(f, reversing)| {
            (0..m.n_darts()).all(|d| {
                // the corner at `d` lands on the corner at f(d), or at f(prev d) when reversing
                let img = if *reversing { f[m.prev(d)] } else { f[d] };
                chart.length(edge_of(d)) == chart.length(edge_of(f[d])) && chart.angle(d) == chart.angle(img)
            })
        })
        .collect();
    let n_faces = m.n_faces();
    let mut orbit: Vec<usize> = (0..n_faces).collect();
    for (f, _) in &kept {
        for d in 0..m.n_darts() {
            let (a, b) = (orbit[face_of[d]], orbit[face_of[f[d]]]);
            if a != b {
                let lo = a.min(b);
                orbit.iter_mut().filter(|o| **o == a || **o == b).for_each(|o| *o = lo);
            }
        }
    }
    (kept.len(), orbit.iter().collect::<BTreeSet<_>>().len())
}

fn map_strategy() -> impl Strategy<Value = &'static PlanarMap> {
    let maps = corpus();
    (0..maps.len()).prop_map(move |i| &maps[i])
}

fn relabeling(m: &PlanarMap) -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<bool>)> {
    let nv = m.n_vertices();
    let ne = m.n_edges();
    (
        Just((0..nv).collect::<Vec<_>>()).prop_shuffle(),
        Just((0..ne).collect::<Vec<_>>()).prop_shuffle(),
        proptest::collection::vec(any::<bool>(), ne),
    )
}

fn runner() -> TestRunner {
    TestRunner::new(Config { cases: TRIALS, failure_persistence: None, ..Config::default() })
}

fn check(name: &str, res: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    res.map_err(|e| format!("{name}: {e}"))
}

/// Automorphism sets are closed under composition and inverse.
pub fn group_closure() -> Result<(), String> {
    let strat = map_strategy().prop_flat_map(|m| {
        let n = m.automorphisms_with_reflections().len();
        (Just(m), 0..n, 0..n)
    });
    check(
        "group closure",
        runner().run(&strat, |(m, i, j)| {
            let g = m.automorphisms_with_reflections();
            let set: BTreeSet<_> = g.iter().map(|a| (a.dart_map.clone(), a.reversing)).collect();
            let prod = g[i].compose(&g[j]);
            prop_assert!(prod.is_valid_for(m));
            prop_assert!(set.contains(&(prod.dart_map.clone(), prod.reversing)));
            let inv = g[i].inverse();
            prop_assert!(set.contains(&(inv.dart_map.clone(), inv.reversing)));
            prop_assert!(g[i].compose(&inv).is_identity());
            prop_assert_eq!(g.len(), brute_automorphisms(m).len());
            Ok(())
        }),
    )
}

/// The dual of the dual is the original map; duals of quadrangulations are 4-regular.
pub fn duality_involution() -> Result<(), String> {
    let strat = map_strategy().prop_flat_map(|m| (Just(m), relabeling(m)));
    check(
        "duality involution",
        runner().run(&strat, |(m, (perm, eperm, flip))| {
            let r = m.relabel(&perm, &eperm, &flip);
            let d = r.dual();
            prop_assert_eq!(d.n_vertices(), m.n_faces());
            prop_assert_eq!(d.n_faces(), m.n_vertices());
            prop_assert!((0..d.n_vertices()).all(|v| d.degree(v) == 4));
            prop_assert!(d.dual().is_isomorphic(m));
            prop_assert_eq!(d.dual().canonical_code(), m.canonical_code());
            Ok(())
        }),
    )
}

/// Canonical codes ignore vertex, edge and dart names.
pub fn canonical_relabeling() -> Result<(), String> {
    let strat = map_strategy().prop_flat_map(|m| (Just(m), relabeling(m)));
    check(
        "canonical relabeling",
        runner().run(&strat, |(m, (perm, eperm, flip))| {
            let r = m.relabel(&perm, &eperm, &flip);
            prop_assert_eq!(r.canonical_code(), m.canonical_code());
            prop_assert_eq!(r.mirror().canonical_code_unoriented(), m.canonical_code_unoriented());
            prop_assert_eq!(r.degrees().iter().sum::<usize>(), 4 * m.n_faces());
            Ok(())
        }),
    )
}

fn rational() -> impl Strategy<Value = Q> {
    (-6i128..=6, 1i128..=4).prop_map(|(n, d)| Q::new(n, d))
}

/// Consistent systems built around a hidden point: the solver's base point
/// and directions must satisfy every equation exactly.
pub fn solver_resubstitution() -> Result<(), String> {
    let strat = (2usize..=6, 1usize..=6).prop_flat_map(|(n, m)| {
        (
            proptest::collection::vec(rational(), n),
            proptest::collection::vec(proptest::collection::vec(-3i128..=3, n), m),
            proptest::collection::vec(rational(), n),
        )
    });
    check(
        "solver resubstitution",
        runner().run(&strat, |(x0, rows, t)| {
            let n = x0.len();
            let eqs: Vec<Equation> = rows
                .iter()
                .map(|r| {
                    let c: Vec<Q> = r.iter().map(|&k| qi(k)).collect();
                    let rhs = dot(&c, &x0);
                    Equation::new(c, rhs)
                })
                .collect();
            let (base, basis) = affine_solution(n, &eqs).ok_or_else(|| TestCaseError::fail("lost a solution"))?;
            let mut point = base.clone();
            for (k, v) in basis.iter().enumerate() {
                for i in 0..n {
                    point[i] += t[k] * v[i];
                }
            }
            for e in &eqs {
                prop_assert!(e.eval(&base).is_zero());
                prop_assert!(e.eval(&point).is_zero());
                for v in &basis {
                    prop_assert!(dot(&e.coeffs, v).is_zero());
                }
            }
            // the hidden point lies in the space, so the bounded problem around it is feasible
            let mut sys = LinearSystem::new(n);
            eqs.iter().cloned().for_each(|e| sys.push_equation(e));
            let lo = x0.iter().copied().fold(Q::zero(), |a, b| if b < a { b } else { a }) - Q::one();
            let hi = x0.iter().copied().fold(Q::zero(), |a, b| if b > a { b } else { a }) + Q::one();
            let fz = solve(&sys, lo, hi);
            prop_assert!(fz.feasible);
            let s = fz.sample.ok_or_else(|| TestCaseError::fail("feasible without sample"))?;
            for e in &eqs {
                prop_assert!(e.eval(&s).is_zero());
            }
            prop_assert!(s.iter().all(|&v| lo < v && v < hi));
            Ok(())
        }),
    )
}
