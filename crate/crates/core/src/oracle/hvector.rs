//! h-vectors, M-sequences and the inequalities used for exclusions.

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::geometry::Rational;
use crate::lattice::FaceLattice;

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k || n < 0 {
        0
    } else {
        binomial(n, k)
    }
}

/// The six-dimensional system as printed: h_k = Σ_{i ≤ k} (−1)^{k−i} C(7 − i, 7 − k) f_{i−1}
/// with f_{−1} = 1. This indexing is one off from the standard simplicial
/// h-vector, which lives in [`standard_h_vector`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HVectorSystem {
    pub d: usize,
    pub f: [i64; 6],
    /// h_0 … h_6.
    pub h: Vec<i64>,
}

impl HVectorSystem {
    /// h_1 = h_6, h_2 = h_5, h_3 = h_4, in that order.
    pub fn relations(&self) -> [bool; 3] {
        [self.h[1] == self.h[6], self.h[2] == self.h[5], self.h[3] == self.h[4]]
    }

    pub fn relations_hold(&self) -> bool {
        self.relations().iter().all(|&r| r)
    }

    /// f_2 from h_1 = h_6 and h_2 = h_5: (28 − 14f0 + 6f1 + f4 − f5) / 2.
    pub fn f2_from_outer(&self) -> Rational {
        let [f0, f1, _, _, f4, f5] = self.f;
        Rational::new(BigInt::from(28 - 14 * f0 + 6 * f1 + f4 - f5), BigInt::from(2))
    }

    /// f_2 from h_3 = h_4 and h_2 = h_5: (168 − 84f0 + 34f1 + f4) / 9.
    pub fn f2_from_inner(&self) -> Rational {
        let [f0, f1, _, _, f4, _] = self.f;
        Rational::new(BigInt::from(168 - 84 * f0 + 34 * f1 + f4), BigInt::from(9))
    }

    /// Equating the two expressions for f_2: f1 = (−84 + 42f0 + 7f4 − 9f5) / 14.
    pub fn f1_elimination(f0: i64, f4: i64, f5: i64) -> Rational {
        Rational::new(BigInt::from(-84 + 42 * f0 + 7 * f4 - 9 * f5), BigInt::from(14))
    }
}

pub fn ds_system_d6(f: [i64; 6]) -> HVectorSystem {
    let ext: Vec<i64> = std::iter::once(1).chain(f.iter().copied()).collect();
    let h = (0..=6i64)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * binom(7 - i, 7 - k) * ext[i as usize]
                })
                .sum()
        })
        .collect();
    HVectorSystem { d: 6, f, h }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationCase {
    pub f0: i64,
    /// f1 forced by the printed elimination.
    #[serde(with = "crate::geometry::rational_string")]
    pub f1: Rational,
    pub integral: bool,
    /// Whether some h-vector with these f0, f5 satisfies the standard
    /// Dehn–Sommerville equations and the g-theorem.
    pub g_theorem_admits: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationReport {
    pub f4: i64,
    pub f5: i64,
    pub barnette_range: Vec<i64>,
    pub cases: Vec<RefutationCase>,
    pub refuted: bool,
}

/// A simple 6-polytope with 19 vertices and 57 edges would have a simplicial
/// dual with f5 = 19 and f4 = 57. Barnette's bound leaves f0 ∈ {8, 9}, and for
/// both the elimination gives a non-integral f1.
pub fn refute_simple_pair_19_57() -> RefutationReport {
    let (d, f4, f5) = (6, 57, 19);
    // seven vertices would make the dual a simplex with seven facets
    let barnette_range: Vec<i64> = (d as i64 + 2..=f5)
        .filter(|&f0| barnette_check(d, f0 as usize, f5 as usize))
        .collect();
    let cases: Vec<RefutationCase> = barnette_range
        .iter()
        .map(|&f0| {
            let f1 = HVectorSystem::f1_elimination(f0, f4, f5);
            RefutationCase {
                f0,
                integral: f1.is_integer(),
                f1,
                g_theorem_admits: simplicial_facets_possible(d, f0 as usize, f5 as usize),
            }
        })
        .collect();
    let refuted = cases.iter().all(|c| !c.integral);
    RefutationReport {
        f4,
        f5,
        barnette_range,
        cases,
        refuted,
    }
}

/// Whether some g-vector (1, f0 − d − 1, g_2, …) satisfying Macaulay's
/// condition yields a symmetric h-vector summing to `facets`.
fn simplicial_facets_possible(d: usize, f0: usize, facets: usize) -> bool {
    if f0 <= d {
        return false;
    }
    let mut g = vec![1, (f0 - d - 1) as i64];
    extend_g(&mut g, d, facets as i64)
}

fn extend_g(g: &mut Vec<i64>, d: usize, target: i64) -> bool {
    if g.len() > d / 2 {
        let h: Vec<i64> = g
            .iter()
            .scan(0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect();
        return (0..=d).map(|i| h[i.min(d - i)]).sum::<i64>() == target;
    }
    let i = g.len() - 1;
    let cap = macaulay_pseudo_power(g[i] as u64, i as u32) as i64;
    for x in 0..=cap {
        g.push(x);
        if extend_g(g, d, target) {
            return true;
        }
        g.pop();
    }
    false
}

/// Standard h-vector of a simplicial d-polytope from its f-vector (f0 … f_{d−1}):
/// h_k = Σ_{i ≤ k} (−1)^{k−i} C(d − i, k − i) f_{i−1}.
pub fn standard_h_vector(f: &[usize]) -> Vec<i64> {
    let d = f.len() as i64;
    let ext: Vec<i64> = std::iter::once(1).chain(f.iter().map(|&x| x as i64)).collect();
    (0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * binom(d - i, k - i) * ext[i as usize]
                })
                .sum()
        })
        .collect()
}

/// (h_0, h_1 − h_0, …, h_⌊d/2⌋ − h_⌊d/2⌋−1).
pub fn g_vector(h: &[i64]) -> Vec<i64> {
    let d = h.len() - 1;
    (0..=d / 2)
        .map(|i| if i == 0 { h[0] } else { h[i] - h[i - 1] })
        .collect()
}

/// Dehn–Sommerville symmetry plus the M-sequence condition on the g-vector.
pub fn satisfies_g_theorem(f: &[usize]) -> bool {
    let h = standard_h_vector(f);
    let d = h.len() - 1;
    (0..=d).all(|i| h[i] == h[d - i]) && is_m_sequence(&g_vector(&h))
}

/// n^⟨i⟩: write n = C(a_i, i) + C(a_{i−1}, i−1) + … with a_i > a_{i−1} > … ≥ j ≥ 1
/// and raise every binomial to C(a_k + 1, k + 1).
pub fn macaulay_pseudo_power(n: u64, i: u32) -> u64 {
    if n == 0 || i == 0 {
        return 0;
    }
    let c = |a: u64, k: u64| -> u64 {
        if a < k {
            0
        } else {
            binomial(a, k)
        }
    };
    let mut rest = n;
    let mut out = 0;
    let mut k = i as u64;
    while rest > 0 && k > 0 {
        let mut a = k;
        while c(a + 1, k) <= rest {
            a += 1;
        }
        rest -= c(a, k);
        out += c(a + 1, k + 1);
        k -= 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MSequenceViolation {
    Negative { index: usize },
    Growth { index: usize, value: i64, bound: u64 },
}

/// The first place where `g` fails Macaulay's condition g_{i+1} ≤ g_i^⟨i⟩, if any.
pub fn m_sequence_violation(g: &[i64]) -> Option<MSequenceViolation> {
    if let Some(index) = g.iter().position(|&x| x < 0) {
        return Some(MSequenceViolation::Negative { index });
    }
    (1..g.len().saturating_sub(1)).find_map(|i| {
        let bound = macaulay_pseudo_power(g[i] as u64, i as u32);
        (g[i + 1] as u64 > bound).then_some(MSequenceViolation::Growth {
            index: i + 1,
            value: g[i + 1],
            bound,
        })
    })
}

pub fn is_m_sequence(g: &[i64]) -> bool {
    m_sequence_violation(g).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KalaiReport {
    /// f1 + Σ_{k ≥ 3} (k − 3) f_2^k.
    pub lhs: i64,
    /// d·n − C(d + 1, 2).
    pub rhs: i64,
    pub slack: i64,
    pub pass: bool,
}

pub fn kalai_check(l: &FaceLattice) -> KalaiReport {
    let d = l.dim() as i64;
    let n = l.nvertices() as i64;
    let f1 = l.fvector().get(1).copied().unwrap_or(0) as i64;
    let census = l.gon_census();
    let lhs = f1
        + census
            .counts
            .iter()
            .map(|(&k, &c)| (k as i64 - 3) * c as i64)
            .sum::<i64>();
    let rhs = d * n - binom(d + 1, 2);
    KalaiReport {
        lhs,
        rhs,
        slack: lhs - rhs,
        pass: lhs >= rhs,
    }
}

/// (d − 1) f0 − (d + 1)(d − 2), the least number of facets of a simplicial d-polytope.
pub fn barnette_bound(d: usize, f0: usize) -> i64 {
    let (d, f0) = (d as i64, f0 as i64);
    (d - 1) * f0 - (d + 1) * (d - 2)
}

pub fn barnette_check(d: usize, f0: usize, facets: usize) -> bool {
    facets as i64 >= barnette_bound(d, f0)
}
