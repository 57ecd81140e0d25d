use std::collections::BTreeSet;

use proptest::prelude::*;

use fpair_core::constructions::{OpStep, Recipe, Seed};
use fpair_core::geometry::{extreme_points, Point, VPolytope};
use fpair_core::lattice::{lattice_of, FPair};
use fpair_core::oracle::{self, is_m_sequence, necessary_conditions, Status, Verdict};
use fpair_core::planner::{Budget, PlanError, Planner};

fn band_pair(d: usize, f0_max: usize) -> impl Strategy<Value = (usize, usize)> {
    (d + 1..=f0_max).prop_flat_map(move |f0| {
        let (lo, hi) = oracle::band(d, f0);
        (Just(f0), lo..=hi)
    })
}

fn monomials(vars: usize, deg: usize) -> Vec<Vec<usize>> {
    if deg == 0 {
        return vec![vec![0; vars]];
    }
    let mut out = Vec::new();
    for m in monomials(vars, deg - 1) {
        let last = m.iter().rposition(|&e| e > 0).unwrap_or(0);
        for v in last..vars {
            let mut n = m.clone();
            n[v] += 1;
            out.push(n);
        }
    }
    out
}

/// Whether an order ideal of monomials in g1 variables has g_i monomials in
/// degree i, for g of length at most 4.
fn m_sequence_brute(g: &[i64]) -> bool {
    if g.iter().any(|&x| x < 0) || g[0] != 1 {
        return false;
    }
    let vars = g.get(1).copied().unwrap_or(0) as usize;
    let Some(&g2) = g.get(2) else { return true };
    let deg2 = monomials(vars, 2);
    let g2 = g2 as usize;
    if g2 > deg2.len() {
        return false;
    }
    let g3 = g.get(3).map(|&x| x as usize);
    let deg3 = monomials(vars, 3);
    let mut best = None::<usize>;
    for mask in 0u32..1 << deg2.len() {
        if mask.count_ones() as usize != g2 {
            continue;
        }
        let chosen: BTreeSet<&Vec<usize>> = deg2
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, m)| m)
            .collect();
        let supported = deg3
            .iter()
            .filter(|m| {
                (0..vars).filter(|&v| m[v] > 0).all(|v| {
                    let mut q = (*m).clone();
                    q[v] -= 1;
                    chosen.contains(&q)
                })
            })
            .count();
        best = Some(best.map_or(supported, |b| b.max(supported)));
    }
    match (g3, best) {
        (None, b) => b.is_some(),
        (Some(g3), Some(b)) => g3 <= b,
        (Some(_), None) => false,
    }
}

proptest! {
    #[test]
    fn feasible_pairs_pass_every_necessary_condition(d in 3usize..=7, seed in any::<u64>()) {
        let f0 = d + 1 + (seed % 14) as usize;
        let (lo, hi) = oracle::band(d, f0);
        let f1 = lo + (seed / 31) as usize % (hi - lo + 1);
        let v = oracle::feasible(d, f0, f1).unwrap();
        if v.status == Status::Feasible {
            prop_assert!(necessary_conditions(d, f0, f1).is_empty(), "{:?}", v);
        }
    }

    #[test]
    fn pyramids_embed_five_into_six((a, b) in band_pair(5, 20)) {
        if oracle::feasible(5, a, b).unwrap().status == Status::Feasible {
            prop_assert_eq!(oracle::feasible(6, a + 1, a + b).unwrap().status, Status::Feasible);
        }
    }

    #[test]
    fn dimension_seven_matches_the_excess_formula((f0, f1) in band_pair(7, 30)) {
        let v = oracle::feasible(7, f0, f1).unwrap();
        let eps = FPair::new(7, f0, f1).excess();
        if eps > 3 * 7 - 10 {
            prop_assert_eq!(v.status, Status::Feasible);
        } else {
            prop_assert_ne!(v.status, Status::Feasible);
        }
    }

    #[test]
    fn m_sequences_agree_with_order_ideals(g1 in 0i64..=3, g2 in 0i64..=7, g3 in 0i64..=11, len in 2usize..=4) {
        let g = [1, g1, g2, g3];
        prop_assert_eq!(is_m_sequence(&g[..len]), m_sequence_brute(&g[..len]), "{:?}", &g[..len]);
    }

    #[test]
    fn hull_ignores_point_order(
        pts in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 6..14),
        rot in 0usize..14,
    ) {
        let points: Vec<Point> = pts.iter().map(|c| Point::from_ints(c)).collect();
        let Ok(a) = extreme_points(&points, 3) else { return Ok(()) };
        let mut shuffled = points.clone();
        shuffled.reverse();
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        let b = extreme_points(&shuffled, 3).unwrap();
        let sa: BTreeSet<_> = a.iter().cloned().collect();
        let sb: BTreeSet<_> = b.iter().cloned().collect();
        prop_assert_eq!(&sa, &sb);
        if let Ok(p) = VPolytope::new(3, a) {
            let q = VPolytope::new(3, b).unwrap();
            let (lp, lq) = (lattice_of(&p).unwrap(), lattice_of(&q).unwrap());
            prop_assert_eq!(lp.fvector(), lq.fvector());
        }
    }

    #[test]
    fn verdicts_round_trip_through_json(d in 3usize..=9, seed in any::<u64>()) {
        let f0 = d + 1 + (seed % 20) as usize;
        let (lo, hi) = oracle::band(d, f0);
        let f1 = lo.saturating_sub(2) + (seed / 7) as usize % (hi - lo + 5);
        let v = oracle::feasible(d, f0, f1).unwrap();
        let back: Verdict = serde_json::from_str(&v.to_json_string()).unwrap();
        prop_assert_eq!(back, v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn planner_agrees_with_the_oracle((f0, f1) in band_pair(6, 13)) {
        let v = oracle::feasible(6, f0, f1).unwrap();
        let budget = Budget { max_len: 4, ..Budget::default() };
        match Planner::new(budget).plan(FPair::new(6, f0, f1)) {
            Ok(r) => {
                prop_assert_eq!(v.status, Status::Feasible);
                prop_assert_eq!(r.execute_stage().unwrap().lattice.fpair(), FPair::new(6, f0, f1));
            }
            Err(PlanError::NotFeasible(_)) => prop_assert_eq!(v.status, Status::Infeasible),
            Err(PlanError::NoPlanFound(_)) => prop_assert_eq!(v.status, Status::Feasible),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn plans_are_deterministic((f0, f1) in band_pair(5, 11)) {
        let budget = Budget { max_len: 4, ..Budget::default() };
        let a = Planner::new(budget).plan(FPair::new(5, f0, f1)).map(|r| r.to_string());
        let b = Planner::new(budget).plan(FPair::new(5, f0, f1)).map(|r| r.to_string());
        prop_assert_eq!(a.ok(), b.ok());
    }

    #[test]
    fn pyramids_add_one_vertex_and_f0_edges(m in 5usize..=9, dim in 3usize..=5) {
        prop_assume!(m > dim);
        let base = Recipe::seed_only(Seed::Cyclic { n: m, dim });
        let before = base.execute_stage().unwrap().lattice.fpair();
        let after = base.then(OpStep::Pyramid).execute_stage().unwrap().lattice.fpair();
        prop_assert_eq!(after, FPair::new(dim + 1, before.f0 + 1, before.f1 + before.f0));
    }
}
