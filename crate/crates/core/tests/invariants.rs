//! Cross-module property batteries: coboundary laws on random cochains,
//! invariance of every dimension under cohomologous twists, the fixed-point
//! counting oracle for G-set coefficients, a brute-force regularity scan,
//! and modular stability of regular sets.

use ellchar::algebra::TwistedGroupAlgebra;
use ellchar::cochain::{
    bilinear_2cocycle, cyclic_3cocycle, klein_2cocycle, trilinear_3cocycle,
};
use ellchar::group::builtin_groups;
use ellchar::inertia::{sl2z_act, SL2Z};
use ellchar::sections::{
    ell_rank, ktheory_dim, regular_classes, regular_pair_orbits, sl2z_block_count,
    CohomologyData, Parity,
};
use ellchar::transgression::{transgress2, transgress3};
use ellchar::{Cochain1, Cochain2, Cochain3, FiniteGroup, GSet, Phase};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn random_phase(rng: &mut ChaCha8Rng) -> Phase {
    let den = rng.gen_range(1..=12i64);
    Phase::new(rng.gen_range(0..den), den)
}

fn random_cochain1(group: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> Cochain1 {
    Cochain1::from_fn(group.clone(), |g| if g == 0 { Phase::ZERO } else { random_phase(rng) })
        .expect("normalized by construction")
}

fn random_cochain2(group: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> Cochain2 {
    Cochain2::from_fn(group.clone(), |g, h| {
        if g == 0 || h == 0 {
            Phase::ZERO
        } else {
            random_phase(rng)
        }
    })
    .expect("normalized by construction")
}

#[test]
fn coboundary_squares_to_zero_on_random_cochains() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for (name, group) in builtin_groups() {
        if group.order() > 12 {
            continue; // the full battery over orders <= 24 runs in acceptance
        }
        for _ in 0..10 {
            let c1 = random_cochain1(&group, &mut rng);
            assert!(c1.coboundary().coboundary().is_zero(), "d(d(c1)) != 0 on {name}");
            let c2 = random_cochain2(&group, &mut rng);
            assert!(c2.coboundary().is_cocycle(), "d(d(c2)) != 0 on {name}");
        }
    }
}

#[test]
fn transgression_composition_law_holds_for_every_builtin_twist() {
    // The ActionCocycle constructor verifies the composition identity on
    // every pair of arrows and fails loudly otherwise, so transgressing a
    // battery of twists is itself the test.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for (name, group) in builtin_groups() {
        if group.order() > 12 {
            continue;
        }
        let zero2 = Cochain2::zero(group.clone());
        transgress2(&zero2).unwrap_or_else(|e| panic!("tau failed on {name}: {e}"));
        let zero3 = Cochain3::zero(group.clone());
        transgress3(&zero3).unwrap_or_else(|e| panic!("rho failed on {name}: {e}"));
        // Coboundaries are cocycles on every group.
        let beta = random_cochain1(&group, &mut rng);
        transgress2(&beta.coboundary()).unwrap_or_else(|e| panic!("tau d(beta) on {name}: {e}"));
        let beta2 = random_cochain2(&group, &mut rng);
        transgress3(&beta2.coboundary()).unwrap_or_else(|e| panic!("rho d(beta) on {name}: {e}"));
    }
    for n in 2..=6 {
        for k in 0..n as i64 {
            transgress3(&cyclic_3cocycle(n, k).unwrap()).expect("carry cocycle transgression");
        }
    }
    transgress2(&klein_2cocycle()).expect("pairing twist transgression");
    transgress2(&bilinear_2cocycle(3).unwrap()).expect("pairing twist transgression");
    transgress3(&trilinear_3cocycle(2).unwrap()).expect("product twist transgression");
}

#[test]
fn dimensions_are_invariant_under_cohomologous_twists() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    // Degree-2 cases: (group, twist) pairs with known center dimensions.
    let cases: Vec<Cochain2> = vec![
        klein_2cocycle(),
        bilinear_2cocycle(3).unwrap(),
        Cochain2::zero(FiniteGroup::named("S3").unwrap()),
    ];
    for alpha in cases {
        let group = alpha.group().clone();
        let data = CohomologyData::point(&group);
        let reference = ktheory_dim(&group, &data, &alpha, Parity::Even).unwrap().dimension;
        let center = TwistedGroupAlgebra::new(alpha.clone()).center_dim().unwrap().dimension;
        assert_eq!(reference, center);
        for _ in 0..5 {
            let beta = random_cochain1(&group, &mut rng);
            let moved = alpha.add(&beta.coboundary()).unwrap();
            let dim = ktheory_dim(&group, &data, &moved, Parity::Even).unwrap().dimension;
            assert_eq!(dim, reference, "K dimension moved under alpha + d(beta)");
            let center_moved =
                TwistedGroupAlgebra::new(moved.clone()).center_dim().unwrap().dimension;
            assert_eq!(center_moved, reference, "center moved under alpha + d(beta)");
            let regs = regular_classes(&group, &moved).unwrap();
            assert_eq!(regs.len(), reference, "regular classes moved under alpha + d(beta)");
        }
    }
    // Degree-3 cases.
    let cases: Vec<Cochain3> = vec![
        cyclic_3cocycle(4, 1).unwrap(),
        cyclic_3cocycle(6, 2).unwrap(),
        trilinear_3cocycle(2).unwrap(),
        Cochain3::zero(FiniteGroup::named("S3").unwrap()),
    ];
    for alpha in cases {
        let group = alpha.group().clone();
        let data = CohomologyData::point(&group);
        let reference = ell_rank(&group, &data, &alpha, 0).unwrap().dimension;
        for _ in 0..5 {
            let beta = random_cochain2(&group, &mut rng);
            let moved = alpha.add(&beta.coboundary()).unwrap();
            let rank = ell_rank(&group, &data, &moved, 0).unwrap().dimension;
            assert_eq!(rank, reference, "ell rank moved under alpha + d(beta)");
            let regs = regular_pair_orbits(&group, &moved).unwrap();
            assert_eq!(regs.len(), reference, "regular orbits moved under alpha + d(beta)");
        }
    }
}

/// Independent fixed-point count: orbits of the G-action found by flood
/// fill, stabilizers by direct scan, conjugacy classes of each stabilizer
/// subgroup counted inside the subgroup.
fn orbit_stabilizer_class_count(x: &GSet) -> usize {
    let group = x.group();
    let n = group.order();
    let mut seen = vec![false; x.size()];
    let mut total = 0;
    for start in 0..x.size() {
        if seen[start] {
            continue;
        }
        // Flood fill the orbit.
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            for g in 0..n {
                let q = x.act(g, p);
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        // Stabilizer of the orbit representative.
        let stab: Vec<usize> = (0..n).filter(|&g| x.act(g, start) == start).collect();
        // Classes of the stabilizer, counted inside the subgroup.
        let mut assigned = vec![false; stab.len()];
        for (i, &s) in stab.iter().enumerate() {
            if assigned[i] {
                continue;
            }
            total += 1;
            for &h in &stab {
                let conj = group.conj(h, s);
                if let Ok(j) = stab.binary_search(&conj) {
                    assigned[j] = true;
                }
            }
        }
    }
    total
}

#[test]
fn gset_dimension_matches_the_orbit_stabilizer_oracle() {
    for (name, group) in builtin_groups() {
        if group.order() > 24 {
            continue;
        }
        let mut gsets = vec![
            GSet::point(group.clone()),
            GSet::trivial(group.clone(), 3),
            GSet::regular(group.clone()),
        ];
        if let Ok(natural) = GSet::natural(group.clone()) {
            gsets.push(natural);
        }
        let alpha = Cochain2::zero(group.clone());
        for x in gsets {
            let data = CohomologyData::from_gset(&x);
            let dim = ktheory_dim(&group, &data, &alpha, Parity::Even).unwrap().dimension;
            let oracle = orbit_stabilizer_class_count(&x);
            assert_eq!(dim, oracle, "fixed-point count disagrees on {name}");
            let odd = ktheory_dim(&group, &data, &alpha, Parity::Odd).unwrap().dimension;
            assert_eq!(odd, 0, "permutation data is concentrated in even degree on {name}");
        }
    }
}

/// Brute-force regularity scan: an orbit representative `(g1, g2)` is
/// regular iff the six-term alternating sum of the twist vanishes for every
/// commuting `h`. Written against the raw cochain table, independently of
/// the character machinery.
fn scan_regular_pairs(alpha: &Cochain3) -> Vec<(usize, usize)> {
    let group = alpha.group();
    let n = group.order();
    let mut out = Vec::new();
    for orbit in group.pair_orbits() {
        let (g1, g2) = (orbit.representative.g1, orbit.representative.g2);
        let mut regular = true;
        for h in 0..n {
            if group.mul(h, g1) != group.mul(g1, h) || group.mul(h, g2) != group.mul(g2, h) {
                continue;
            }
            let plus = alpha.get(h, g1, g2) + alpha.get(g2, h, g1) + alpha.get(g1, g2, h);
            let minus = alpha.get(g1, h, g2) + alpha.get(h, g2, g1) + alpha.get(g2, g1, h);
            if plus != minus {
                regular = false;
                break;
            }
        }
        if regular {
            out.push((g1, g2));
        }
    }
    out
}

#[test]
fn regular_pair_orbits_match_the_triple_scan() {
    for n in 1..=6 {
        for k in 0..n as i64 {
            let alpha = cyclic_3cocycle(n, k).unwrap();
            let group = alpha.group().clone();
            let fast: Vec<(usize, usize)> = regular_pair_orbits(&group, &alpha)
                .unwrap()
                .iter()
                .map(|o| (o.representative.g1, o.representative.g2))
                .collect();
            assert_eq!(fast, scan_regular_pairs(&alpha), "scan disagrees at n={n}, k={k}");
        }
    }
    let alpha = trilinear_3cocycle(2).unwrap();
    let group = alpha.group().clone();
    let fast: Vec<(usize, usize)> = regular_pair_orbits(&group, &alpha)
        .unwrap()
        .iter()
        .map(|o| (o.representative.g1, o.representative.g2))
        .collect();
    assert_eq!(fast, scan_regular_pairs(&alpha));
}

#[test]
fn modular_generators_satisfy_the_defining_relations() {
    let s = SL2Z::s();
    let t = SL2Z::t();
    let id = SL2Z::identity();
    assert_eq!(s.mul(s).mul(s).mul(s), id, "S^4 = 1");
    let st = s.mul(t);
    let mut p = id;
    for _ in 0..6 {
        p = p.mul(st);
    }
    assert_eq!(p, id, "(ST)^6 = 1");
    // The right action respects multiplication on a sample group.
    let group = FiniteGroup::named("S3").unwrap();
    for orbit in group.pair_orbits() {
        let pair = orbit.representative;
        let via_product = sl2z_act(&group, pair, s.mul(t));
        let stepwise = sl2z_act(&group, sl2z_act(&group, pair, s), t);
        assert_eq!(via_product, stepwise);
    }
}

#[test]
fn regular_sets_are_stable_under_the_modular_action() {
    for n in 1..=6 {
        for k in 0..n as i64 {
            let alpha = cyclic_3cocycle(n, k).unwrap();
            let group = alpha.group().clone();
            let blocks = sl2z_block_count(&group, &alpha).unwrap();
            assert!(blocks.regular_blocks <= blocks.total_blocks);
        }
    }
    // Nontrivial sanity point: with no twist every orbit is regular and the
    // block counts coincide.
    for (_, group) in builtin_groups() {
        if group.order() > 8 {
            continue;
        }
        let alpha = Cochain3::zero(group.clone());
        let blocks = sl2z_block_count(&group, &alpha).unwrap();
        assert_eq!(blocks.regular_blocks, blocks.total_blocks);
    }
}

#[test]
fn cohomologous_solver_round_trips_random_coboundaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for name in ["Z4", "Z2xZ2", "S3"] {
        let group = FiniteGroup::named(name).unwrap();
        let alpha = Cochain2::zero(group.clone());
        for _ in 0..3 {
            let beta = random_cochain1(&group, &mut rng);
            let moved = alpha.add(&beta.coboundary()).unwrap();
            let found = moved.cohomologous_to(&alpha).unwrap().expect("coboundary is detected");
            assert_eq!(found.coboundary(), beta.coboundary(), "recovered beta has wrong d");
        }
        // And a known non-coboundary stays undetected.
        if name == "Z2xZ2" {
            let klein = klein_2cocycle();
            let sols = klein.cohomologous_to(&Cochain2::zero(klein.group().clone())).unwrap();
            assert!(sols.is_none(), "the pairing class is not trivial");
        }
    }
}
