//! Generators, operators and the recipe language that composes them.

mod generators;
pub(crate) mod laws;
mod ops;

use std::fmt;

use num_integer::binomial;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{facet_enumeration, Facet, GeometryError, VPolytope, MAX_DIM};
use crate::lattice::{build_face_lattice, FPair, FaceLattice, LatticeError};

pub use generators::{
    gen_cube, gen_cyclic, gen_cyclic_with_params, gen_join, gen_polygon, gen_simplex, gen_simplex_product,
};
pub use ops::{
    op_connected_sum, op_polar_dual, op_pyramid, op_pyramid_over_facet, op_stellar_subdivision,
    op_truncate_simple_edge, op_truncate_simple_vertex, PLACEMENT_RETRIES, SQUASH_STEPS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("dimension {0} out of range")]
    DimensionOutOfRange(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no simple vertex")]
    NoSimpleVertex,
    #[error("no simple edge")]
    NoSimpleEdge,
    #[error("no simplex facet")]
    NoSimplexFacet,
    #[error("no {face_dim}-face whose star spans {star_size} vertices")]
    NoMatchingFace { face_dim: usize, star_size: usize },
    #[error("apex placement failed")]
    ApexPlacementFailed,
    #[error("cut hyperplane search failed")]
    CutFailed,
    #[error("connected sum failed: convex position not achieved")]
    ConnectedSumFailed,
    #[error("recipe invalid: {0}")]
    RecipeInvalid(String),
}

impl ConstructionError {
    /// Placement failures that a deeper search schedule could resolve.
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            ConstructionError::ApexPlacementFailed
                | ConstructionError::CutFailed
                | ConstructionError::ConnectedSumFailed
        )
    }
}

/// Starting polytope of a recipe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Seed {
    Simplex { dim: usize },
    Cyclic { n: usize, dim: usize },
    SimplexProduct { dims: Vec<usize> },
    Cube { dim: usize },
    Polygon { n: usize },
    Join { a: Box<Seed>, b: Box<Seed> },
}

impl Seed {
    pub fn dim(&self) -> usize {
        match self {
            Seed::Simplex { dim } | Seed::Cyclic { dim, .. } | Seed::Cube { dim } => *dim,
            Seed::SimplexProduct { dims } => dims.iter().sum(),
            Seed::Polygon { .. } => 2,
            Seed::Join { a, b } => a.dim() + b.dim() + 1,
        }
    }

    pub fn build(&self) -> Result<VPolytope, ConstructionError> {
        match self {
            Seed::Simplex { dim } => {
                if *dim > MAX_DIM {
                    return Err(ConstructionError::DimensionOutOfRange(*dim));
                }
                Ok(VPolytope::new(*dim, generators::simplex_points(*dim))?)
            }
            Seed::Cyclic { n, dim } => gen_cyclic(*n, *dim),
            Seed::SimplexProduct { dims } => gen_simplex_product(dims),
            Seed::Cube { dim } => gen_cube(*dim),
            Seed::Polygon { n } => gen_polygon(*n),
            Seed::Join { a, b } => gen_join(&a.build()?, &b.build()?),
        }
    }

    fn ext_fvector(&self) -> laws::Ext {
        match self {
            Seed::Simplex { dim } => laws::simplex_ext(*dim),
            Seed::Cyclic { n, dim } => laws::extend(&laws::cyclic_fvector(*n, *dim)),
            Seed::SimplexProduct { dims } => dims
                .iter()
                .map(|&a| laws::simplex_ext(a))
                .reduce(|x, y| laws::product_ext(&x, &y))
                .unwrap_or_else(|| vec![1, 1]),
            Seed::Cube { dim } => Seed::SimplexProduct { dims: vec![1; *dim] }.ext_fvector(),
            Seed::Polygon { n } => vec![1, *n, *n, 1],
            Seed::Join { a, b } => laws::join_ext(&a.ext_fvector(), &b.ext_fvector()),
        }
    }

    /// Proper f-vector (f_0, …, f_{d−1}) from the closed formulas.
    pub fn fvector(&self) -> Vec<usize> {
        laws::proper(&self.ext_fvector())
    }

    fn predicates(&self) -> Predicates {
        use Tri::*;
        let d = self.dim();
        let f = self.fvector();
        let simplex = f[0] == d + 1;
        if simplex || d <= 2 {
            return Predicates::all(Yes);
        }
        match self {
            Seed::Cyclic { .. } if d >= 4 => Predicates {
                simple_vertex: No,
                simplex_facet: Yes,
                simple_edge: No,
                simplicial: Yes,
                simple: No,
            },
            Seed::Cyclic { .. } => Predicates {
                simplex_facet: Yes,
                simplicial: Yes,
                ..Predicates::all(Unknown)
            },
            Seed::SimplexProduct { dims } => product_predicates(dims),
            Seed::Cube { dim } => product_predicates(&vec![1; *dim]),
            _ => Predicates::all(Unknown),
        }
    }

    fn label(&self) -> String {
        match self {
            Seed::Simplex { dim } => format!("simplex({dim})"),
            Seed::Cyclic { n, dim } => format!("cyclic({n},{dim})"),
            Seed::SimplexProduct { dims } => {
                let s: Vec<String> = dims.iter().map(usize::to_string).collect();
                format!("simplex_product({})", s.join(","))
            }
            Seed::Cube { dim } => format!("cube({dim})"),
            Seed::Polygon { n } => format!("polygon({n})"),
            Seed::Join { a, b } => format!("join({}, {})", a.label(), b.label()),
        }
    }
}

fn product_predicates(dims: &[usize]) -> Predicates {
    use Tri::*;
    let m = dims.len();
    let simplex_facet = m == 1 || (m == 2 && dims.contains(&1));
    Predicates {
        simple_vertex: Yes,
        simplex_facet: if simplex_facet { Yes } else { No },
        simple_edge: Yes,
        simplicial: if m == 1 { Yes } else { No },
        simple: Yes,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetSelect {
    /// First facet in canonical order.
    First,
    /// First facet with exactly d vertices.
    #[default]
    FirstSimplex,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexSelect {
    #[default]
    LowestSimple,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeSelect {
    /// First simple edge in lexicographic order.
    #[default]
    First,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum OpStep {
    Pyramid,
    PyramidOverFacet {
        #[serde(default)]
        select: FacetSelect,
    },
    TruncateSimpleVertex {
        #[serde(default)]
        select: VertexSelect,
    },
    TruncateSimpleEdge {
        #[serde(default)]
        select: EdgeSelect,
    },
    ConnectedSum {
        other: Box<Recipe>,
        #[serde(default)]
        select: FacetSelect,
        #[serde(default)]
        other_select: FacetSelect,
    },
    PolarDual,
    /// Stellar subdivision of the first `face_dim`-face whose star spans
    /// `star_size` vertices.
    StellarSubdivision {
        face_dim: usize,
        star_size: usize,
    },
}

impl OpStep {
    pub fn label(&self) -> String {
        match self {
            OpStep::Pyramid => "pyramid".into(),
            OpStep::PyramidOverFacet {
                select: FacetSelect::FirstSimplex,
            } => "pyramid_over_facet".into(),
            OpStep::PyramidOverFacet {
                select: FacetSelect::First,
            } => "pyramid_over_facet(first)".into(),
            OpStep::TruncateSimpleVertex { .. } => "truncate_simple_vertex".into(),
            OpStep::TruncateSimpleEdge { .. } => "truncate_simple_edge".into(),
            OpStep::ConnectedSum { other, .. } => format!("connected_sum[{other}]"),
            OpStep::PolarDual => "polar_dual".into(),
            OpStep::StellarSubdivision { face_dim, star_size } => {
                format!("stellar_subdivision({face_dim},{star_size})")
            }
        }
    }
}

impl OpStep {
    /// Runs this step on `cur`, executing a connected-sum summand from scratch.
    pub fn apply(&self, cur: &Stage) -> Result<Stage, ConstructionError> {
        let next = match self {
            OpStep::Pyramid => op_pyramid(&cur.polytope)?,
            OpStep::PyramidOverFacet { select } => op_pyramid_over_facet(cur, *select)?,
            OpStep::TruncateSimpleVertex { select } => op_truncate_simple_vertex(cur, *select)?,
            OpStep::TruncateSimpleEdge { select } => op_truncate_simple_edge(cur, *select)?,
            OpStep::ConnectedSum {
                other,
                select,
                other_select,
            } => {
                let b = other.execute_stage()?;
                op_connected_sum(cur, &b, *select, *other_select)?
            }
            OpStep::PolarDual => op_polar_dual(&cur.polytope)?,
            OpStep::StellarSubdivision { face_dim, star_size } => op_stellar_subdivision(cur, *face_dim, *star_size)?,
        };
        Stage::new(next)
    }

    /// The f-vector this step's law gives from the actual f-vector before it,
    /// or `None` when the step is recount-only. `other` is the summand's
    /// f-vector for connected sums.
    pub fn law(&self, before: &[usize], other: Option<&[usize]>) -> Option<Vec<usize>> {
        let d = before.len();
        match self {
            OpStep::Pyramid => Some(laws::pyramid(before)),
            OpStep::PyramidOverFacet {
                select: FacetSelect::FirstSimplex,
            } => Some(laws::stack(before)),
            OpStep::TruncateSimpleVertex { .. } => Some(laws::truncate_vertex(before)),
            OpStep::TruncateSimpleEdge { .. } if d == 6 => Some(laws::truncate_edge(before)),
            OpStep::ConnectedSum {
                select: FacetSelect::FirstSimplex,
                other_select: FacetSelect::FirstSimplex,
                ..
            } => other.filter(|b| b.len() == d).map(|b| laws::connected_sum(before, b)),
            OpStep::PolarDual => Some(laws::dual(before)),
            _ => None,
        }
    }
}

/// A seed followed by operations; `dimension` is the dimension of the result.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Recipe {
    pub dimension: usize,
    pub seed: Seed,
    #[serde(default)]
    pub steps: Vec<OpStep>,
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.seed.label())?;
        for s in &self.steps {
            write!(f, " > {}", s.label())?;
        }
        Ok(())
    }
}

/// A polytope with its facets and face lattice.
#[derive(Clone, Debug)]
pub struct Stage {
    pub polytope: VPolytope,
    pub facets: Vec<Facet>,
    pub lattice: FaceLattice,
}

impl Stage {
    pub fn new(polytope: VPolytope) -> Result<Self, ConstructionError> {
        let facets = facet_enumeration(&polytope)?;
        let lattice = build_face_lattice(&polytope, &facets)?;
        Ok(Stage {
            polytope,
            facets,
            lattice,
        })
    }
}

impl Recipe {
    pub fn new(seed: Seed, steps: Vec<OpStep>) -> Self {
        let lifts = steps.iter().filter(|s| matches!(s, OpStep::Pyramid)).count();
        Recipe {
            dimension: seed.dim() + lifts,
            seed,
            steps,
        }
    }

    pub fn seed_only(seed: Seed) -> Self {
        Recipe::new(seed, Vec::new())
    }

    /// Returns a copy with `step` appended.
    pub fn then(&self, step: OpStep) -> Self {
        let mut steps = self.steps.clone();
        steps.push(step);
        Recipe::new(self.seed.clone(), steps)
    }

    /// Steps including those of nested connected-sum summands.
    pub fn total_steps(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match s {
                OpStep::ConnectedSum { other, .. } => 1 + other.total_steps(),
                _ => 1,
            })
            .sum()
    }

    fn check_dimensions(&self) -> Result<(), ConstructionError> {
        let lifts = self.steps.iter().filter(|s| matches!(s, OpStep::Pyramid)).count();
        if self.seed.dim() + lifts != self.dimension {
            return Err(ConstructionError::RecipeInvalid(format!(
                "seed dimension {} with {lifts} pyramid lifts does not give dimension {}",
                self.seed.dim(),
                self.dimension
            )));
        }
        if !(2..=MAX_DIM).contains(&self.dimension) {
            return Err(ConstructionError::DimensionOutOfRange(self.dimension));
        }
        Ok(())
    }

    /// Runs the recipe and returns the seed stage followed by one stage per step.
    pub fn execute_traced(&self) -> Result<Vec<Stage>, ConstructionError> {
        self.check_dimensions()?;
        let mut stages = vec![Stage::new(self.seed.build()?)?];
        for step in &self.steps {
            let next = step.apply(stages.last().expect("nonempty"))?;
            stages.push(next);
        }
        Ok(stages)
    }

    pub fn execute_stage(&self) -> Result<Stage, ConstructionError> {
        Ok(self.execute_traced()?.pop().expect("nonempty"))
    }

    pub fn execute(&self) -> Result<VPolytope, ConstructionError> {
        Ok(self.execute_stage()?.polytope)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("recipe JSON serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, ConstructionError> {
        let r: Recipe = serde_json::from_str(s).map_err(|e| ConstructionError::RecipeInvalid(e.to_string()))?;
        r.check_dimensions()?;
        Ok(r)
    }
}

/// Three-valued predicate knowledge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            _ => Tri::Unknown,
        }
    }

    fn yes_or_unknown(self) -> Tri {
        if self == Tri::Yes {
            Tri::Yes
        } else {
            Tri::Unknown
        }
    }
}

/// Conservatively tracked properties gating operator preconditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Predicates {
    pub simple_vertex: Tri,
    pub simplex_facet: Tri,
    pub simple_edge: Tri,
    pub simplicial: Tri,
    pub simple: Tri,
}

impl Predicates {
    fn all(t: Tri) -> Self {
        Predicates {
            simple_vertex: t,
            simplex_facet: t,
            simple_edge: t,
            simplicial: t,
            simple: t,
        }
    }

    /// Consequences that hold for every polytope.
    fn close(mut self, pair: Option<FPair>) -> Self {
        if self.simple == Tri::Yes {
            self.simple_vertex = Tri::Yes;
            self.simple_edge = Tri::Yes;
        }
        if self.simplicial == Tri::Yes {
            self.simplex_facet = Tri::Yes;
        }
        if let Some(p) = pair {
            // the average degree 2 f1 / f0 is below d + 1
            if 2 * p.f1 < (p.d + 1) * p.f0 {
                self.simple_vertex = Tri::Yes;
            }
            if p.f0 == p.d + 1 {
                self = Predicates::all(Tri::Yes);
            }
        }
        self
    }
}

/// Composed law output for a recipe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    /// Predicted pair; an estimate when `recount_required` is set.
    pub fpair: Option<FPair>,
    pub fvector: Option<Vec<usize>>,
    /// Some step lacks a calibrated law, so only the geometric recount decides.
    pub recount_required: bool,
    pub predicates: Predicates,
}

impl Prediction {
    fn from_fvector(f: Vec<usize>, predicates: Predicates, recount_required: bool) -> Self {
        let pair = FPair::new(f.len(), f[0], f.get(1).copied().unwrap_or(0));
        Prediction {
            fpair: Some(pair),
            predicates: predicates.close(Some(pair)),
            fvector: Some(f),
            recount_required,
        }
    }

    fn from_pair(pair: Option<FPair>, predicates: Predicates, recount_required: bool) -> Self {
        Prediction {
            fpair: pair,
            fvector: None,
            predicates: predicates.close(pair),
            recount_required: recount_required || pair.is_none(),
        }
    }
}

fn require(t: Tri, step: &OpStep, what: &str) -> Result<(), ConstructionError> {
    if t == Tri::No {
        Err(ConstructionError::RecipeInvalid(format!(
            "{} needs {what}, which is absent",
            step.label()
        )))
    } else {
        Ok(())
    }
}

/// Composes the seed's closed-form f-vector with each step's law.
pub fn predict_fpair(r: &Recipe) -> Result<Prediction, ConstructionError> {
    use Tri::*;
    r.check_dimensions()?;
    let mut cur = Prediction::from_fvector(r.seed.fvector(), r.seed.predicates(), false);
    let mut d = r.seed.dim();
    for step in &r.steps {
        let p = cur.predicates;
        let pair = cur.fpair;
        let recount = cur.recount_required;
        cur = match step {
            OpStep::Pyramid => {
                d += 1;
                let base_is_simplex = pair.map(|q| q.f0 == q.d + 1);
                let preds = Predicates {
                    simple_vertex: p.simple_vertex.yes_or_unknown(),
                    simplex_facet: p.simplex_facet.yes_or_unknown(),
                    simple_edge: p.simple_edge.yes_or_unknown(),
                    simplicial: match base_is_simplex {
                        Some(true) => Yes,
                        Some(false) => No,
                        None => Unknown,
                    },
                    simple: match base_is_simplex {
                        Some(true) => Yes,
                        Some(false) => No,
                        None => Unknown,
                    },
                };
                match &cur.fvector {
                    Some(f) => Prediction::from_fvector(laws::pyramid(f), preds, recount),
                    None => Prediction::from_pair(pair.map(|q| FPair::new(d, q.f0 + 1, q.f0 + q.f1)), preds, recount),
                }
            }
            OpStep::PyramidOverFacet {
                select: FacetSelect::FirstSimplex,
            } => {
                require(p.simplex_facet, step, "a simplex facet")?;
                let preds = Predicates {
                    simple_vertex: Yes,
                    simplex_facet: Yes,
                    simple_edge: Unknown,
                    simplicial: p.simplicial,
                    simple: No,
                };
                match &cur.fvector {
                    Some(f) => Prediction::from_fvector(laws::stack(f), preds, recount),
                    None => Prediction::from_pair(pair.map(|q| FPair::new(d, q.f0 + 1, q.f1 + d)), preds, recount),
                }
            }
            OpStep::PyramidOverFacet {
                select: FacetSelect::First,
            } => Prediction::from_pair(None, Predicates::all(Unknown), true),
            OpStep::TruncateSimpleVertex { .. } => {
                require(p.simple_vertex, step, "a simple vertex")?;
                let preds = Predicates {
                    simple_vertex: Yes,
                    simplex_facet: Yes,
                    simple_edge: Yes,
                    simplicial: No,
                    simple: p.simple,
                };
                match &cur.fvector {
                    Some(f) => Prediction::from_fvector(laws::truncate_vertex(f), preds, recount),
                    None => Prediction::from_pair(
                        pair.map(|q| FPair::new(d, q.f0 + d - 1, q.f1 + binomial(d, 2))),
                        preds,
                        recount,
                    ),
                }
            }
            OpStep::TruncateSimpleEdge { .. } => {
                require(p.simple_edge, step, "a simple edge")?;
                let preds = Predicates {
                    simple_vertex: Yes,
                    simplex_facet: Unknown,
                    simple_edge: Yes,
                    simplicial: No,
                    simple: p.simple,
                };
                // only the six-dimensional increments are calibrated
                let recount = recount || d != 6;
                match &cur.fvector {
                    Some(f) => Prediction::from_fvector(laws::truncate_edge(f), preds, recount),
                    None => Prediction::from_pair(
                        pair.map(|q| FPair::new(d, q.f0 + 2 * d - 4, q.f1 + (d - 1) * (d - 1) - 1)),
                        preds,
                        recount,
                    ),
                }
            }
            OpStep::ConnectedSum {
                other,
                select,
                other_select,
            } => {
                let o = predict_fpair(other)?;
                if other.dimension != d {
                    return Err(ConstructionError::RecipeInvalid(format!(
                        "connected sum of dimensions {d} and {}",
                        other.dimension
                    )));
                }
                let gate = |s: &FacetSelect, t: Tri| match s {
                    FacetSelect::FirstSimplex => require(t, step, "a simplex facet"),
                    FacetSelect::First => Ok(()),
                };
                gate(select, p.simplex_facet)?;
                gate(other_select, o.predicates.simplex_facet)?;
                let preds = Predicates {
                    simple_vertex: Unknown,
                    simplex_facet: Unknown,
                    simple_edge: Unknown,
                    simplicial: p.simplicial.and(o.predicates.simplicial),
                    simple: No,
                };
                let recount = recount
                    || o.recount_required
                    || *select == FacetSelect::First
                    || *other_select == FacetSelect::First;
                match (&cur.fvector, &o.fvector) {
                    (Some(a), Some(b)) => Prediction::from_fvector(laws::connected_sum(a, b), preds, recount),
                    _ => Prediction::from_pair(
                        pair.zip(o.fpair)
                            .map(|(a, b)| FPair::new(d, a.f0 + b.f0 - d, a.f1 + b.f1 - binomial(d, 2))),
                        preds,
                        recount,
                    ),
                }
            }
            OpStep::PolarDual => {
                let preds = Predicates {
                    simple_vertex: p.simplex_facet,
                    simplex_facet: p.simple_vertex,
                    simple_edge: Unknown,
                    simplicial: p.simple,
                    simple: p.simplicial,
                };
                match &cur.fvector {
                    Some(f) => Prediction::from_fvector(laws::dual(f), preds, recount),
                    None => Prediction::from_pair(None, preds, true),
                }
            }
            OpStep::StellarSubdivision { face_dim, star_size } => {
                require(p.simplicial, step, "a simplicial polytope")?;
                let preds = Predicates {
                    simple_vertex: Unknown,
                    simplex_facet: p.simplicial.yes_or_unknown(),
                    simple_edge: Unknown,
                    simplicial: p.simplicial,
                    simple: Unknown,
                };
                let removed = usize::from(*face_dim == 1);
                Prediction::from_pair(
                    pair.map(|q| FPair::new(d, q.f0 + 1, (q.f1 + star_size).saturating_sub(removed))),
                    preds,
                    true,
                )
            }
        };
    }
    Ok(cur)
}
