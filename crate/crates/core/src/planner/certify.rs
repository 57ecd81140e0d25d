use std::fmt;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::constructions::{predict_fpair, ConstructionError, OpStep, Recipe};
use crate::geometry::{extreme_points, GeometryError, VPolytope};
use crate::lattice::{lattice_of, vertex_connectivity_at_least, FPair, FaceLattice};
use crate::oracle::kalai_check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Euler,
    Balinski,
    Kalai,
    DegreeMin,
    LawAgreement,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Euler => "euler",
            Check::Balinski => "balinski",
            Check::Kalai => "kalai",
            Check::DegreeMin => "degree_min",
            Check::LawAgreement => "law_agreement",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("construction failed: {0}")]
    ConstructionFailed(#[from] ConstructionError),
    #[error("law violation at step {index} ({op}): law gives {expected:?}, geometry gives {actual:?}")]
    LawViolation {
        index: usize,
        op: String,
        expected: Vec<usize>,
        actual: Vec<usize>,
    },
    #[error("{check} check failed on stage {stage} with {fpair}")]
    CheckFailed { check: Check, stage: usize, fpair: FPair },
    #[error("recipe yields {actual}, not {expected}")]
    TargetMismatch { expected: FPair, actual: FPair },
}

/// A recipe's executed result together with the checks it passed.
#[derive(Clone, Debug)]
pub struct CertifiedWitness {
    pub recipe: Recipe,
    pub polytope: VPolytope,
    pub lattice: FaceLattice,
    pub fpair: FPair,
    pub checks: Vec<Check>,
    /// Pair after the seed and after every step.
    pub trace: Vec<FPair>,
}

/// Euler, minimum degree, Balinski connectivity and Kalai's inequality.
/// Kalai's inequality is only meaningful from dimension 3 on and is
/// reported as passing below that.
pub fn invariant_checks(l: &FaceLattice) -> Vec<(Check, bool)> {
    let d = l.dim();
    let g = l.graph();
    vec![
        (Check::Euler, l.euler_holds()),
        (Check::DegreeMin, g.min_degree() >= d),
        (Check::Balinski, vertex_connectivity_at_least(&g, d)),
        (Check::Kalai, d < 3 || kalai_check(l).pass),
    ]
}

fn law_error(index: usize, op: String, expected: &[usize], actual: &[usize]) -> CertifyError {
    CertifyError::LawViolation {
        index,
        op,
        expected: expected.to_vec(),
        actual: actual.to_vec(),
    }
}

/// Executes the recipe, compares every law-backed step with the recount and
/// runs the invariant checks on every intermediate polytope.
pub fn certify(r: &Recipe) -> Result<CertifiedWitness, CertifyError> {
    let stages = r.execute_traced()?;
    let seed_f = r.seed.fvector();
    if seed_f != stages[0].lattice.fvector() {
        return Err(law_error(0, "seed".into(), &seed_f, stages[0].lattice.fvector()));
    }
    for (i, (step, w)) in r.steps.iter().zip(stages.windows(2)).enumerate() {
        let other = match step {
            OpStep::ConnectedSum { other, .. } => Some(other.execute_stage()?.lattice.fvector().to_vec()),
            _ => None,
        };
        let (before, after) = (w[0].lattice.fvector(), w[1].lattice.fvector());
        if let Some(law) = step.law(before, other.as_deref()) {
            if law != after {
                return Err(law_error(i + 1, step.label(), &law, after));
            }
        }
    }
    let last = stages.last().expect("nonempty");
    let prediction = predict_fpair(r)?;
    if !prediction.recount_required && prediction.fpair != Some(last.lattice.fpair()) {
        let expected = prediction.fvector.unwrap_or_default();
        return Err(law_error(
            r.steps.len(),
            "composed prediction".into(),
            &expected,
            last.lattice.fvector(),
        ));
    }
    for (i, s) in stages.iter().enumerate() {
        if let Some((check, _)) = invariant_checks(&s.lattice).into_iter().find(|(_, ok)| !ok) {
            return Err(CertifyError::CheckFailed {
                check,
                stage: i,
                fpair: s.lattice.fpair(),
            });
        }
    }
    let trace = stages.iter().map(|s| s.lattice.fpair()).collect();
    let last = stages.into_iter().next_back().expect("nonempty");
    Ok(CertifiedWitness {
        recipe: r.clone(),
        fpair: last.lattice.fpair(),
        polytope: last.polytope,
        lattice: last.lattice,
        checks: vec![
            Check::Euler,
            Check::Balinski,
            Check::Kalai,
            Check::DegreeMin,
            Check::LawAgreement,
        ],
        trace,
    })
}

/// [`certify`] plus equality with the query pair.
pub fn certify_target(r: &Recipe, target: FPair) -> Result<CertifiedWitness, CertifyError> {
    let w = certify(r)?;
    if w.fpair != target {
        return Err(CertifyError::TargetMismatch {
            expected: target,
            actual: w.fpair,
        });
    }
    Ok(w)
}

pub const CHECKSUM_ENCODING: &str = "facets as ascending vertex-index lists in lexicographic order, \
     indices in decimal joined by ',', each facet followed by '\\n'";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetChecksum {
    pub algorithm: String,
    pub encoding: String,
    pub digest: String,
}

/// SHA-256 of the facet sets in the encoding [`CHECKSUM_ENCODING`].
pub fn facet_checksum(l: &FaceLattice) -> FacetChecksum {
    let mut facets: Vec<Vec<usize>> = l
        .facets()
        .iter()
        .map(|f| {
            let mut f = f.clone();
            f.sort_unstable();
            f
        })
        .collect();
    facets.sort();
    let mut h = Sha256::new();
    for f in &facets {
        let line: Vec<String> = f.iter().map(usize::to_string).collect();
        h.update(line.join(",").as_bytes());
        h.update(b"\n");
    }
    FacetChecksum {
        algorithm: "sha256".into(),
        encoding: CHECKSUM_ENCODING.into(),
        digest: hex::encode(h.finalize()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub fpair: FPair,
    pub fvector: Vec<usize>,
    pub recipe: String,
    pub trace: Vec<FPair>,
    pub checks: Vec<Check>,
    pub facet_checksum: FacetChecksum,
}

impl Certificate {
    pub fn of(w: &CertifiedWitness) -> Self {
        Certificate {
            fpair: w.fpair,
            fvector: w.lattice.fvector().to_vec(),
            recipe: w.recipe.to_string(),
            trace: w.trace.clone(),
            checks: w.checks.clone(),
            facet_checksum: facet_checksum(&w.lattice),
        }
    }
}

/// Writes `witness.json`, `recipe.json` and `certificate.json` into `dir`.
pub fn write_bundle(dir: &Path, w: &CertifiedWitness) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let cert = serde_json::to_string_pretty(&Certificate::of(w)).map_err(io::Error::other)?;
    std::fs::write(dir.join("witness.json"), w.polytope.to_json_string() + "\n")?;
    std::fs::write(dir.join("recipe.json"), w.recipe.to_json_string() + "\n")?;
    std::fs::write(dir.join("certificate.json"), cert + "\n")?;
    Ok(())
}

/// Result of re-checking a polytope given by its vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub fpair: FPair,
    pub fvector: Vec<usize>,
    /// Indices of input points that are not vertices of the hull.
    pub redundant: Vec<usize>,
    pub checks: Vec<(Check, bool)>,
    pub pass: bool,
}

/// Recomputes hull, lattice and pair, and runs the invariant checks. Points
/// that are not vertices are named and make the report fail.
pub fn verify_polytope(p: &VPolytope) -> Result<VerifyReport, GeometryError> {
    let extreme = extreme_points(p.vertices(), p.dim())?;
    let redundant: Vec<usize> = (0..p.nvertices())
        .filter(|&i| !extreme.contains(&p.vertices()[i]))
        .collect();
    let hull = VPolytope::new(p.dim(), extreme)?;
    let l = lattice_of(&hull).map_err(|e| GeometryError::Json(e.to_string()))?;
    let checks = invariant_checks(&l);
    let pass = redundant.is_empty() && checks.iter().all(|&(_, ok)| ok);
    Ok(VerifyReport {
        fpair: l.fpair(),
        fvector: l.fvector().to_vec(),
        redundant,
        checks,
        pass,
    })
}
