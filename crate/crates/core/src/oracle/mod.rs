//! Feasibility verdicts for (d, f0, f1) and the bound checkers behind them.

mod hvector;

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Rational;
use crate::lattice::FPair;

pub use hvector::{
    barnette_bound, barnette_check, ds_system_d6, g_vector, is_m_sequence, kalai_check, m_sequence_violation,
    macaulay_pseudo_power, refute_simple_pair_19_57, satisfies_g_theorem, standard_h_vector, HVectorSystem,
    KalaiReport, MSequenceViolation, RefutationCase, RefutationReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("not a polytope query: d = {d}, f0 = {f0} (need d ≥ 3 and f0 ≥ d + 1)")]
    NotAPolytopeQuery { d: usize, f0: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Feasible,
    Infeasible,
    ConjecturedFeasible,
    OutOfCharacterizedRange,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::ConjecturedFeasible => "conjectured-feasible",
            Status::OutOfCharacterizedRange => "out-of-characterized-range",
        })
    }
}

/// Stable rule identifiers. The serialized names are part of the JSON contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "band_lower")]
    BandLower,
    #[serde(rename = "band_upper")]
    BandUpper,
    #[serde(rename = "E3_steinitz")]
    E3Steinitz,
    #[serde(rename = "E4_band")]
    E4Band,
    #[serde(rename = "E4_exception")]
    E4Exception,
    #[serde(rename = "E5_band")]
    E5Band,
    #[serde(rename = "E5_family")]
    E5Family,
    #[serde(rename = "E5_sporadic")]
    E5Sporadic,
    #[serde(rename = "E6_band")]
    E6Band,
    #[serde(rename = "E6_family")]
    E6Family,
    #[serde(rename = "E6_sporadic")]
    E6Sporadic,
    #[serde(rename = "E6_non_triplex")]
    E6NonTriplex,
    #[serde(rename = "E7_excess_gt_11")]
    E7ExcessGt11,
    #[serde(rename = "E7_uncharacterized")]
    E7Uncharacterized,
    #[serde(rename = "conjecture_excess_gt_3d_minus_10")]
    ConjectureRegion,
    #[serde(rename = "conjecture_uncharacterized")]
    ConjectureUncharacterized,
    #[serde(rename = "excess_gap")]
    ExcessGap,
    #[serde(rename = "phi_bound")]
    PhiBound,
    #[serde(rename = "phi_plus_one")]
    PhiPlusOne,
    #[serde(rename = "non_triplex")]
    NonTriplex,
}

impl Rule {
    pub const ALL: [Rule; 20] = [
        Rule::BandLower,
        Rule::BandUpper,
        Rule::E3Steinitz,
        Rule::E4Band,
        Rule::E4Exception,
        Rule::E5Band,
        Rule::E5Family,
        Rule::E5Sporadic,
        Rule::E6Band,
        Rule::E6Family,
        Rule::E6Sporadic,
        Rule::E6NonTriplex,
        Rule::E7ExcessGt11,
        Rule::E7Uncharacterized,
        Rule::ConjectureRegion,
        Rule::ConjectureUncharacterized,
        Rule::ExcessGap,
        Rule::PhiBound,
        Rule::PhiPlusOne,
        Rule::NonTriplex,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::BandLower => "band_lower",
            Rule::BandUpper => "band_upper",
            Rule::E3Steinitz => "E3_steinitz",
            Rule::E4Band => "E4_band",
            Rule::E4Exception => "E4_exception",
            Rule::E5Band => "E5_band",
            Rule::E5Family => "E5_family",
            Rule::E5Sporadic => "E5_sporadic",
            Rule::E6Band => "E6_band",
            Rule::E6Family => "E6_family",
            Rule::E6Sporadic => "E6_sporadic",
            Rule::E6NonTriplex => "E6_non_triplex",
            Rule::E7ExcessGt11 => "E7_excess_gt_11",
            Rule::E7Uncharacterized => "E7_uncharacterized",
            Rule::ConjectureRegion => "conjecture_excess_gt_3d_minus_10",
            Rule::ConjectureUncharacterized => "conjecture_uncharacterized",
            Rule::ExcessGap => "excess_gap",
            Rule::PhiBound => "phi_bound",
            Rule::PhiPlusOne => "phi_plus_one",
            Rule::NonTriplex => "non_triplex",
        }
    }

    /// What the rule rests on, in words.
    pub fn cite(self) -> &'static str {
        match self {
            Rule::BandLower => "every vertex of a d-polytope has degree at least d",
            Rule::BandUpper => "a graph on f0 vertices has at most C(f0, 2) edges",
            Rule::E3Steinitz => "Steinitz: 3f0/2 ≤ f1 ≤ 3f0 − 6 characterizes 3-polytopes",
            Rule::E4Band => "4-polytope characterization: 2f0 ≤ f1 ≤ C(f0, 2) minus four exceptions",
            Rule::E4Exception => "4-polytope characterization: (6,12), (7,14), (8,17), (10,20) are excluded",
            Rule::E5Band => "5-polytope characterization: band minus the parity family and three sporadics",
            Rule::E5Family => "5-polytope characterization: no pair (f0, ⌊5f0/2 + 1⌋) for f0 ≥ 7",
            Rule::E5Sporadic => "5-polytope characterization: (8,20), (9,25), (13,35) are excluded",
            Rule::E6Band => "6-polytope characterization: band 3f0 ≤ f1 ≤ C(f0, 2) minus the listed exceptions",
            Rule::E6Family => {
                "6-polytope characterization: excess 1 or 2 lies in the forbidden gap, so (f0, 3f0 + 1) is excluded"
            }
            Rule::E6Sporadic => "6-polytope characterization: sporadic exception",
            Rule::E6NonTriplex => "non-triplex excess bound: 11 vertices and 36 edges would need excess at least 8",
            Rule::E7ExcessGt11 => "7-polytopes with excess above 11 realize every pair with f1 ≤ C(f0, 2)",
            Rule::E7Uncharacterized => "7-polytopes are characterized only for excess above 11",
            Rule::ConjectureRegion => {
                "conjectured: d-polytopes with excess above 3d − 10 realize every pair with f1 ≤ C(f0, 2)"
            }
            Rule::ConjectureUncharacterized => {
                "no characterization or conjecture covers excess at most 3d − 10 in this dimension"
            }
            Rule::ExcessGap => "the excess degree of a d-polytope never lies strictly between 0 and d − 2",
            Rule::PhiBound => "a d-polytope with at most 2d vertices has at least φ(f0, d) edges",
            Rule::PhiPlusOne => "no d-polytope with d ≥ 4 has d + 4 vertices and φ(d + 4, d) + 1 edges",
            Rule::NonTriplex => {
                "a non-triplex with d + k vertices, 4 ≤ k ≤ d, has excess at least (k − 1)(d − k) + 2(k − 3)"
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub rule: Rule,
    pub cite: String,
}

impl Reason {
    fn new(rule: Rule) -> Self {
        Reason {
            rule,
            cite: rule.cite().to_string(),
        }
    }

    fn with_cite(rule: Rule, cite: &str) -> Self {
        Reason {
            rule,
            cite: cite.to_string(),
        }
    }
}

/// A universal necessary condition that the query fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub d: usize,
    pub f0: usize,
    pub f1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub query: Query,
    pub status: Status,
    pub reasons: Vec<Reason>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_hint: Option<String>,
}

impl Verdict {
    fn new(q: FPair, status: Status, reasons: Vec<Reason>) -> Self {
        Verdict {
            query: Query {
                d: q.d,
                f0: q.f0,
                f1: q.f1,
            },
            status,
            reasons,
            diagnostics: Vec::new(),
            witness_hint: None,
        }
    }

    pub fn pair(&self) -> FPair {
        FPair::new(self.query.d, self.query.f0, self.query.f1)
    }

    /// Whether the planner may look for a witness.
    pub fn is_constructible_claim(&self) -> bool {
        matches!(self.status, Status::Feasible | Status::ConjecturedFeasible)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("verdicts serialize")
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.pair(), self.status)?;
        for r in &self.reasons {
            writeln!(f, "  [{}] {}", r.rule, r.cite)?;
        }
        for v in &self.diagnostics {
            writeln!(f, "  diagnostic [{}] {}", v.rule, v.detail)?;
        }
        Ok(())
    }
}

/// 2φ(v, d) = dv + (v − d − 1)(2d − v), kept integral.
fn twice_phi(v: usize, d: usize) -> i64 {
    let (v, d) = (v as i64, d as i64);
    d * v + (v - d - 1) * (2 * d - v)
}

/// φ(v, d) = dv/2 + (v − d − 1)(2d − v)/2. Kept rational although the two
/// halves always sum to an integer.
pub fn phi(v: usize, d: usize) -> Rational {
    Rational::new(BigInt::from(twice_phi(v, d)), BigInt::from(2))
}

/// The pair of the triplex with d + k vertices is (d + k, φ(d + k, d)).
fn is_triplex_pair(d: usize, f0: usize, f1: usize) -> bool {
    2 * f1 as i64 == twice_phi(f0, d)
}

fn check_query(d: usize, f0: usize) -> Result<(), OracleError> {
    if d < 3 || f0 <= d {
        Err(OracleError::NotAPolytopeQuery { d, f0 })
    } else {
        Ok(())
    }
}

/// Every universal condition from the preliminaries that (d, f0, f1) violates.
/// An empty list is not a feasibility proof.
pub fn necessary_conditions(d: usize, f0: usize, f1: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    let q = FPair::new(d, f0, f1);
    let eps = q.excess();
    let (di, f1i) = (d as i64, f1 as i64);
    let mut push = |rule: Rule, detail: String| out.push(Violation { rule, detail });

    if eps < 0 {
        push(Rule::BandLower, format!("f1 = {f1} < {}·{f0}/2", d));
    }
    if f1 > binomial(f0, 2) {
        push(Rule::BandUpper, format!("f1 = {f1} > C({f0}, 2) = {}", binomial(f0, 2)));
    }
    if 0 < eps && eps < di - 2 {
        push(
            Rule::ExcessGap,
            format!("excess {eps} lies strictly between 0 and {}", d - 2),
        );
    }
    if f0 <= 2 * d && 2 * f1i < twice_phi(f0, d) {
        push(Rule::PhiBound, format!("f1 = {f1} < φ({f0}, {d}) = {}", phi(f0, d)));
    }
    if d >= 4 && f0 == d + 4 && 2 * f1i == twice_phi(f0, d) + 2 {
        push(Rule::PhiPlusOne, format!("f1 = φ({f0}, {d}) + 1"));
    }
    if f0 >= d + 4 && f0 <= 2 * d && !is_triplex_pair(d, f0, f1) {
        let k = (f0 - d) as i64;
        let bound = (k - 1) * (di - k) + 2 * (k - 3);
        if eps < bound {
            push(
                Rule::NonTriplex,
                format!("excess {eps} < {bound} for a non-triplex with {f0} = {d} + {k} vertices"),
            );
        }
    }
    out
}

const E4_EXCEPTIONS: [(usize, usize); 4] = [(6, 12), (7, 14), (8, 17), (10, 20)];

const E5_SPORADIC: [(usize, usize); 3] = [(8, 20), (9, 25), (13, 35)];

/// The sporadic six-dimensional exclusions with the argument behind each.
pub const E6_SPORADIC: [(usize, usize, &str); 17] = [
    (8, 24, "below the φ edge bound for at most 2d vertices"),
    (9, 27, "below the φ edge bound for at most 2d vertices"),
    (9, 29, "below the φ edge bound for at most 2d vertices"),
    (10, 30, "below the φ edge bound for at most 2d vertices"),
    (10, 32, "below the φ edge bound for at most 2d vertices"),
    (10, 34, "the (d + 4, φ + 1) exclusion"),
    (11, 33, "below the φ edge bound for at most 2d vertices"),
    (12, 38, "non-triplex excess bound"),
    (12, 39, "facet analysis closed by Kalai's rigidity inequality"),
    (13, 39, "below the d² + d − 1 minimum for 2d + 1 vertices"),
    (14, 42, "below the known minimum of 45 edges for 14 vertices"),
    (14, 44, "below the known minimum of 45 edges for 14 vertices"),
    (15, 47, "excess d − 2 structure contradicts Balinski connectivity"),
    (17, 53, "excess d − 2 structure contradicts Balinski connectivity"),
    (18, 54, "no simple 6-polytope has 3d vertices"),
    (
        19,
        57,
        "a simple pair refuted by Barnette's bound and Dehn–Sommerville integrality",
    ),
    (20, 62, "excess d − 3 structure contradicts Balinski connectivity"),
];

fn e6_sporadic(f0: usize, f1: usize) -> Option<&'static str> {
    E6_SPORADIC
        .iter()
        .find(|(a, b, _)| (*a, *b) == (f0, f1))
        .map(|(_, _, why)| *why)
}

/// Decides (d, f0, f1) by the characterization for that dimension.
pub fn feasible(d: usize, f0: usize, f1: usize) -> Result<Verdict, OracleError> {
    check_query(d, f0)?;
    let q = FPair::new(d, f0, f1);
    let eps = q.excess();
    let upper = if d == 3 { 3 * f0 - 6 } else { binomial(f0, 2) };
    if eps < 0 {
        return Ok(Verdict::new(q, Status::Infeasible, vec![Reason::new(Rule::BandLower)]));
    }
    if f1 > upper {
        let mut reasons = vec![if d == 3 {
            Reason::new(Rule::E3Steinitz)
        } else {
            Reason::new(Rule::BandUpper)
        }];
        // (7, 22) is also the first member of the excluded family
        if d == 6 && f0 >= 7 && f1 == 3 * f0 + 1 {
            reasons.push(Reason::new(Rule::E6Family));
        }
        return Ok(Verdict::new(q, Status::Infeasible, reasons));
    }
    let infeasible = |rule: Rule| Verdict::new(q, Status::Infeasible, vec![Reason::new(rule)]);
    let feasible = |rule: Rule| Verdict::new(q, Status::Feasible, vec![Reason::new(rule)]);
    let mut v = match d {
        3 => feasible(Rule::E3Steinitz),
        4 if E4_EXCEPTIONS.contains(&(f0, f1)) => infeasible(Rule::E4Exception),
        4 => feasible(Rule::E4Band),
        5 if f0 >= 7 && 2 * f1 == 5 * f0 + 2 - f0 % 2 => infeasible(Rule::E5Family),
        5 if E5_SPORADIC.contains(&(f0, f1)) => infeasible(Rule::E5Sporadic),
        5 => feasible(Rule::E5Band),
        6 if f0 >= 7 && f1 == 3 * f0 + 1 => infeasible(Rule::E6Family),
        6 if (f0, f1) == (11, 36) => infeasible(Rule::E6NonTriplex),
        6 => match e6_sporadic(f0, f1) {
            Some(why) => Verdict::new(
                q,
                Status::Infeasible,
                vec![Reason::with_cite(
                    Rule::E6Sporadic,
                    &format!("{}: {why}", Rule::E6Sporadic.cite()),
                )],
            ),
            None => feasible(Rule::E6Band),
        },
        7 if eps > 11 => feasible(Rule::E7ExcessGt11),
        7 => Verdict::new(
            q,
            Status::OutOfCharacterizedRange,
            vec![Reason::new(Rule::E7Uncharacterized)],
        ),
        _ if eps > 3 * d as i64 - 10 => Verdict::new(
            q,
            Status::ConjecturedFeasible,
            vec![Reason::new(Rule::ConjectureRegion)],
        ),
        _ => Verdict::new(
            q,
            Status::OutOfCharacterizedRange,
            vec![Reason::new(Rule::ConjectureUncharacterized)],
        ),
    };
    v.diagnostics = necessary_conditions(d, f0, f1);
    Ok(v)
}

/// The open upper end of the table band: Steinitz for d = 3, C(f0, 2) beyond.
pub fn band(d: usize, f0: usize) -> (usize, usize) {
    let lower = (d * f0).div_ceil(2);
    let upper = if d == 3 { 3 * f0 - 6 } else { binomial(f0, 2) };
    (lower, upper)
}

/// Classification of simple d-polytopes with at most 3d vertices. `None`
/// means f0 lies beyond what the classification covers.
pub fn simple_classification(d: usize, f0: usize) -> Option<Vec<String>> {
    if d < 3 || f0 <= d || f0 > 3 * d {
        return None;
    }
    let delta = |a: usize, b: usize| format!("Δ_{{{a},{b}}}");
    let names = if f0 < 2 * d {
        if f0 == d + 1 {
            vec![delta(0, d)]
        } else {
            vec![]
        }
    } else if f0 == 2 * d {
        vec![delta(1, d - 1)]
    } else if f0 <= 3 * d - 4 {
        vec![]
    } else if f0 == 3 * d - 3 {
        vec![delta(2, d - 2)]
    } else if f0 == 3 * d - 2 {
        if d == 6 {
            vec![delta(3, 3)]
        } else {
            vec![]
        }
    } else if f0 == 3 * d - 1 {
        let mut v = vec![format!("J_{d}")];
        if d == 3 {
            v.push("Δ_{1,1,1}".to_string());
        }
        if d == 7 {
            v.push(delta(3, 4));
        }
        v
    } else {
        match d {
            4 => vec!["Δ_{1,1,2}".to_string(), "Γ_{2,2}".to_string()],
            8 => vec![delta(3, 5)],
            _ => vec![],
        }
    };
    Some(names)
}
