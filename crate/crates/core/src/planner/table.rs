use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{certify_target, Planner};
use crate::lattice::FPair;
use crate::oracle::{self, OracleError, Status, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum WitnessStatus {
    Certified { recipe: String },
    PlannedUncertified { recipe: String, error: String },
    NoPlanFound { reason: String },
}

impl WitnessStatus {
    pub fn label(&self) -> &'static str {
        match self {
            WitnessStatus::Certified { .. } => "certified",
            WitnessStatus::PlannedUncertified { .. } => "planned-uncertified",
            WitnessStatus::NoPlanFound { .. } => "no-plan-found",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub f0: usize,
    pub f1: usize,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessStatus>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub d: usize,
    pub f0_max: usize,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn pairs_with(&self, status: Status) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .filter(|r| r.verdict.status == status)
            .map(|r| (r.f0, r.f1))
            .collect()
    }

    pub fn infeasible(&self) -> Vec<(usize, usize)> {
        self.pairs_with(Status::Infeasible)
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d = {}, f0 ≤ {}", self.d, self.f0_max)?;
        for r in &self.rows {
            let rules: Vec<&str> = r.verdict.reasons.iter().map(|x| x.rule.id()).collect();
            write!(f, "({}, {})  {}  {}", r.f0, r.f1, r.verdict.status, rules.join(","))?;
            if let Some(w) = &r.witness {
                write!(f, "  {}", w.label())?;
                if let WitnessStatus::Certified { recipe } | WitnessStatus::PlannedUncertified { recipe, .. } = w {
                    write!(f, "  {recipe}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("tables are available for 3 ≤ d ≤ 7, not d = {0}")]
    DimensionOutOfRange(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// f1 values listed for a given f0: the band, widened in dimensions 5 and 6 so
/// that the first member of the excluded family ⌊d f0 / 2⌋ + 1 always appears
/// (for d = 6 it lies above C(7, 2) when f0 = 7).
pub fn table_f1_range(d: usize, f0: usize) -> RangeInclusive<usize> {
    let (lower, mut upper) = oracle::band(d, f0);
    if matches!(d, 5 | 6) && f0 >= 7 {
        upper = upper.max(d * f0 / 2 + 1);
    }
    lower..=upper
}

/// Verdicts for every listed pair with `d + 1 ≤ f0 ≤ f0_max`. With a planner,
/// every feasible pair is also planned and certified.
pub fn table(d: usize, f0_max: usize, mut planner: Option<&mut Planner>) -> Result<Table, TableError> {
    if !(3..=7).contains(&d) {
        return Err(TableError::DimensionOutOfRange(d));
    }
    let mut rows = Vec::new();
    for f0 in d + 1..=f0_max {
        for f1 in table_f1_range(d, f0) {
            let verdict = oracle::feasible(d, f0, f1)?;
            let witness = match planner.as_deref_mut() {
                Some(p) if verdict.status == Status::Feasible => Some(witness_status(p, FPair::new(d, f0, f1))),
                _ => None,
            };
            rows.push(TableRow {
                f0,
                f1,
                verdict,
                witness,
            });
        }
    }
    Ok(Table { d, f0_max, rows })
}

fn witness_status(p: &mut Planner, target: FPair) -> WitnessStatus {
    match p.plan(target) {
        Err(e) => WitnessStatus::NoPlanFound { reason: e.to_string() },
        Ok(recipe) => match certify_target(&recipe, target) {
            Ok(_) => WitnessStatus::Certified {
                recipe: recipe.to_string(),
            },
            Err(e) => WitnessStatus::PlannedUncertified {
                recipe: recipe.to_string(),
                error: e.to_string(),
            },
        },
    }
}
