//! Recipe search over the construction algebra, geometric certification and
//! feasibility tables with witness status.
//!
//! The search is an iterative deepening over recipe length. States are
//! `(d, f0, f1)` pairs plus a required property (a simplex facet, a simple
//! vertex or a simple edge) that the next operation needs. Transition laws
//! only pick predecessors; every candidate is executed and the real face
//! lattice decides whether it is accepted.

mod certify;
mod table;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::rc::Rc;

use num_integer::binomial;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{op_connected_sum, ConstructionError, FacetSelect, OpStep, Recipe, Seed, Stage};
use crate::lattice::{FPair, FaceLattice};
use crate::oracle::{self, OracleError, Status, Verdict};

pub use certify::{
    certify, certify_target, facet_checksum, invariant_checks, verify_polytope, write_bundle, Certificate,
    CertifiedWitness, CertifyError, Check, FacetChecksum, VerifyReport, CHECKSUM_ENCODING,
};
pub use table::{table, table_f1_range, Table, TableError, TableRow, WitnessStatus};

/// Limits for one `plan` call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Maximum recipe length, counting the steps of connected-sum summands.
    pub max_len: usize,
    /// Maximum number of seed polytopes built per query.
    pub max_seeds: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_len: 8,
            max_seeds: 200,
        }
    }
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("dimension {0} is outside the planner's range 3..=7")]
    DimensionOutOfRange(usize),
    #[error("{} is {}; plans are only searched for feasible pairs", .0.pair(), .0.status)]
    NotFeasible(Box<Verdict>),
    #[error("no plan found for {}", .0.target)]
    NoPlanFound(Box<Frontier>),
}

/// What the search saw around the target when it gave up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frontier {
    pub target: FPair,
    pub max_len: usize,
    pub states_explored: usize,
    pub seeds_tried: usize,
    pub budget_exhausted: bool,
    pub moves: Vec<FrontierMove>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierMove {
    pub op: String,
    pub predecessor: FPair,
    pub outcome: String,
}

impl fmt::Display for Frontier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "no recipe of length ≤ {} reaches {} ({} states explored, {} seeds built{})",
            self.max_len,
            self.target,
            self.states_explored,
            self.seeds_tried,
            if self.budget_exhausted {
                ", seed budget exhausted"
            } else {
                ""
            }
        )?;
        for m in &self.moves {
            writeln!(
                f,
                "  {} from ({}, {}): {}",
                m.op, m.predecessor.f0, m.predecessor.f1, m.outcome
            )?;
        }
        Ok(())
    }
}

/// Property the caller's next operation needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Need {
    Any,
    SimplexFacet,
    SimpleVertex,
    SimpleEdge,
}

impl Need {
    fn describe(self) -> &'static str {
        match self {
            Need::Any => "no requirement",
            Need::SimplexFacet => "a simplex facet",
            Need::SimpleVertex => "a simple vertex",
            Need::SimpleEdge => "a simple edge",
        }
    }

    fn holds(self, l: &FaceLattice) -> bool {
        match self {
            Need::Any => true,
            Need::SimplexFacet => !l.simplex_facets().is_empty(),
            Need::SimpleVertex => !l.simple_vertices().is_empty(),
            Need::SimpleEdge => !l.simple_edges().is_empty(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Key {
    d: usize,
    n: usize,
    e: usize,
    need: Need,
}

impl Key {
    fn pair(&self) -> FPair {
        FPair::new(self.d, self.n, self.e)
    }
}

#[derive(Clone)]
struct Found {
    recipe: Recipe,
    stage: Rc<Stage>,
}

impl Found {
    fn len(&self) -> usize {
        self.recipe.total_steps()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Stack,
    TruncateVertex,
    TruncateEdge,
    Pyramid,
    /// polar ▸ connected sum with stock item ▸ polar
    DualSum(usize),
    Stellar,
}

/// A polytope with a simplex facet used as the second summand of dual-level sums.
struct StockItem {
    recipe: Recipe,
    stage: Rc<Stage>,
    facets: usize,
    ridges: usize,
}

/// Four-dimensional simplicial polytopes reached from cyclic polytopes by
/// stellar subdivisions of edges and triangles, one per pair.
struct StellarStock {
    nmax: usize,
    entries: BTreeMap<(usize, usize), Found>,
}

const STELLAR_MIN_NMAX: usize = 12;

/// Memoized recipe search. Reusing one planner across queries shares its
/// caches; results do not depend on query order.
pub struct Planner {
    budget: Budget,
    found: HashMap<Key, Found>,
    failed: HashMap<Key, usize>,
    seeds: HashMap<Seed, Option<Rc<Stage>>>,
    stock: HashMap<usize, Rc<Vec<StockItem>>>,
    stellar: Option<StellarStock>,
    seeds_tried: usize,
    explored: usize,
    exhausted: bool,
}

impl Planner {
    pub fn new(budget: Budget) -> Self {
        Planner {
            budget,
            found: HashMap::new(),
            failed: HashMap::new(),
            seeds: HashMap::new(),
            stock: HashMap::new(),
            stellar: None,
            seeds_tried: 0,
            explored: 0,
            exhausted: false,
        }
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// A recipe whose executed result has the target pair.
    pub fn plan(&mut self, target: FPair) -> Result<Recipe, PlanError> {
        self.plan_found(target).map(|f| f.recipe)
    }

    /// Plans and certifies.
    pub fn construct(&mut self, target: FPair) -> Result<CertifiedWitness, ConstructError> {
        let recipe = self.plan(target)?;
        Ok(certify_target(&recipe, target)?)
    }

    fn plan_found(&mut self, target: FPair) -> Result<Found, PlanError> {
        let FPair { d, f0, f1 } = target;
        if !(3..=crate::geometry::MAX_DIM).contains(&d) {
            return Err(PlanError::DimensionOutOfRange(d));
        }
        let verdict = oracle::feasible(d, f0, f1)?;
        if !matches!(verdict.status, Status::Feasible | Status::ConjecturedFeasible) {
            return Err(PlanError::NotFeasible(Box::new(verdict)));
        }
        self.seeds_tried = 0;
        self.explored = 0;
        self.exhausted = false;
        let key = Key {
            d,
            n: f0,
            e: f1,
            need: Need::Any,
        };
        match self.solve(key, self.budget.max_len) {
            Some(found) => Ok(found),
            None => Err(PlanError::NoPlanFound(Box::new(self.frontier(key)))),
        }
    }

    fn solve(&mut self, key: Key, bound: usize) -> Option<Found> {
        if let Some(f) = self.found.get(&key) {
            return (f.len() <= bound).then(|| f.clone());
        }
        let start = match self.failed.get(&key) {
            Some(&b) if b >= bound => return None,
            Some(&b) => b + 1,
            None => 0,
        };
        if !plausible(key.pair()) {
            self.failed.insert(key, usize::MAX);
            return None;
        }
        for len in start..=bound {
            if let Some(f) = self.try_len(key, len) {
                self.found.insert(key, f.clone());
                return Some(f);
            }
            if self.exhausted {
                return None;
            }
            self.failed.insert(key, len);
        }
        None
    }

    fn moves(&mut self, d: usize) -> Vec<Move> {
        if d < 3 {
            return Vec::new();
        }
        let mut out = vec![Move::Stack, Move::TruncateVertex, Move::TruncateEdge, Move::Pyramid];
        out.extend((0..self.stock_for(d).len()).map(Move::DualSum));
        if d == 4 {
            out.push(Move::Stellar);
        }
        out
    }

    /// Predecessor state and the number of steps the move adds.
    fn predecessor(&mut self, key: Key, mv: Move) -> Option<(Key, usize)> {
        let Key { d, n, e, .. } = key;
        let (pd, pn, pe, need, cost) = match mv {
            Move::Stack => (d, n.checked_sub(1)?, e.checked_sub(d)?, Need::SimplexFacet, 1),
            Move::TruncateVertex => (
                d,
                n.checked_sub(d - 1)?,
                e.checked_sub(binomial(d, 2))?,
                Need::SimpleVertex,
                1,
            ),
            Move::TruncateEdge => (
                d,
                n.checked_sub(2 * d - 4)?,
                e.checked_sub((d - 1) * (d - 1) - 1)?,
                Need::SimpleEdge,
                1,
            ),
            Move::Pyramid => (d - 1, n.checked_sub(1)?, e.checked_sub(n - 1)?, key.need, 1),
            Move::DualSum(i) => {
                let stock = self.stock_for(d);
                let item = &stock[i];
                (
                    d,
                    (n + 2).checked_sub(item.facets)?,
                    (e + d).checked_sub(item.ridges)?,
                    Need::SimpleVertex,
                    3 + item.recipe.total_steps(),
                )
            }
            Move::Stellar => return None,
        };
        Some((
            Key {
                d: pd,
                n: pn,
                e: pe,
                need,
            },
            cost,
        ))
    }

    fn try_len(&mut self, key: Key, len: usize) -> Option<Found> {
        if len == 0 {
            return self.try_seeds(key);
        }
        for mv in self.moves(key.d) {
            if mv == Move::Stellar {
                if let Some(f) = self.try_stellar(key, len) {
                    return Some(f);
                }
                continue;
            }
            let Some((child, cost)) = self.predecessor(key, mv) else {
                continue;
            };
            if cost > len || child.d < 2 {
                continue;
            }
            let Some(base) = self.solve(child, len - cost) else {
                if self.exhausted {
                    return None;
                }
                continue;
            };
            self.explored += 1;
            if let Ok(f) = self.extend(&base, mv) {
                if f.stage.lattice.fpair() == key.pair() && key.need.holds(&f.stage.lattice) {
                    return Some(f);
                }
            }
        }
        None
    }

    fn extend(&mut self, base: &Found, mv: Move) -> Result<Found, ConstructionError> {
        let single = |step: OpStep| -> Result<Found, ConstructionError> {
            let stage = step.apply(&base.stage)?;
            Ok(Found {
                recipe: base.recipe.then(step),
                stage: Rc::new(stage),
            })
        };
        match mv {
            Move::Stack => single(OpStep::PyramidOverFacet {
                select: FacetSelect::FirstSimplex,
            }),
            Move::TruncateVertex => single(OpStep::TruncateSimpleVertex {
                select: Default::default(),
            }),
            Move::TruncateEdge => single(OpStep::TruncateSimpleEdge {
                select: Default::default(),
            }),
            Move::Pyramid => single(OpStep::Pyramid),
            Move::DualSum(i) => {
                let stock = self.stock_for(base.recipe.dimension);
                let item = &stock[i];
                let polar = OpStep::PolarDual.apply(&base.stage)?;
                let summed = Stage::new(op_connected_sum(
                    &polar,
                    &item.stage,
                    FacetSelect::FirstSimplex,
                    FacetSelect::FirstSimplex,
                )?)?;
                let stage = OpStep::PolarDual.apply(&summed)?;
                let recipe = base
                    .recipe
                    .then(OpStep::PolarDual)
                    .then(OpStep::ConnectedSum {
                        other: Box::new(item.recipe.clone()),
                        select: FacetSelect::FirstSimplex,
                        other_select: FacetSelect::FirstSimplex,
                    })
                    .then(OpStep::PolarDual);
                Ok(Found {
                    recipe,
                    stage: Rc::new(stage),
                })
            }
            Move::Stellar => unreachable!("stellar stock entries are not extensions"),
        }
    }

    fn try_seeds(&mut self, key: Key) -> Option<Found> {
        for seed in seed_candidates(key.pair()) {
            let stage = match self.seeds.get(&seed) {
                Some(s) => s.clone(),
                None => {
                    self.seeds_tried += 1;
                    if self.seeds_tried > self.budget.max_seeds {
                        self.exhausted = true;
                        return None;
                    }
                    let s = seed.build().and_then(Stage::new).ok().map(Rc::new);
                    self.seeds.insert(seed.clone(), s.clone());
                    s
                }
            };
            let Some(stage) = stage else { continue };
            if stage.lattice.fpair() == key.pair() && key.need.holds(&stage.lattice) {
                return Some(Found {
                    recipe: Recipe::seed_only(seed),
                    stage,
                });
            }
        }
        None
    }

    fn try_stellar(&mut self, key: Key, len: usize) -> Option<Found> {
        if self.stellar.as_ref().is_none_or(|s| s.nmax < key.n) {
            self.stellar = Some(build_stellar(key.n.max(STELLAR_MIN_NMAX)));
        }
        let stock = self.stellar.as_ref()?;
        let f = stock.entries.get(&(key.n, key.e))?;
        (f.len() <= len && key.need.holds(&f.stage.lattice)).then(|| f.clone())
    }

    fn stock_for(&mut self, d: usize) -> Rc<Vec<StockItem>> {
        self.stock.entry(d).or_insert_with(|| Rc::new(build_stock(d))).clone()
    }

    fn frontier(&mut self, key: Key) -> Frontier {
        let mut moves = Vec::new();
        for mv in self.moves(key.d) {
            let Some((child, cost)) = self.predecessor(key, mv) else {
                continue;
            };
            if child.d < 2 {
                continue;
            }
            let outcome = if !plausible(child.pair()) {
                "predecessor pair is excluded".to_string()
            } else if self.found.contains_key(&child) {
                "predecessor planned, but the step did not reach the target".to_string()
            } else if child.need != Need::Any
                && self
                    .solve(
                        Key {
                            need: Need::Any,
                            ..child
                        },
                        self.budget.max_len,
                    )
                    .is_some()
            {
                format!("predecessor found, but none with {}", child.need.describe())
            } else {
                format!(
                    "no predecessor plan within {} steps",
                    self.budget.max_len.saturating_sub(cost)
                )
            };
            let op = match mv {
                Move::Stack => "pyramid_over_facet".to_string(),
                Move::TruncateVertex => "truncate_simple_vertex".to_string(),
                Move::TruncateEdge => "truncate_simple_edge".to_string(),
                Move::Pyramid => "pyramid".to_string(),
                Move::DualSum(i) => format!("dual connected sum with {}", self.stock_for(key.d)[i].recipe),
                Move::Stellar => continue,
            };
            moves.push(FrontierMove {
                op,
                predecessor: child.pair(),
                outcome,
            });
        }
        Frontier {
            target: key.pair(),
            max_len: self.budget.max_len,
            states_explored: self.explored,
            seeds_tried: self.seeds_tried,
            budget_exhausted: self.exhausted,
            moves,
        }
    }
}

impl Default for Planner {
    fn default() -> Self {
        Planner::new(Budget::default())
    }
}

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// Plans with a fresh planner.
pub fn plan(d: usize, f0: usize, f1: usize, budget: Budget) -> Result<Recipe, PlanError> {
    Planner::new(budget).plan(FPair::new(d, f0, f1))
}

/// Whether the pair may be used as an intermediate state: inside the band and
/// not excluded by the oracle. Outside the characterized range only the
/// necessary conditions prune.
fn plausible(p: FPair) -> bool {
    let FPair { d, f0: n, f1: e } = p;
    if d == 2 {
        return n >= 3 && e == n;
    }
    if n < d + 1 {
        return false;
    }
    let (lower, upper) = oracle::band(d, n);
    if e < lower || e > upper {
        return false;
    }
    match oracle::feasible(d, n, e) {
        Ok(v) => match v.status {
            Status::Feasible | Status::ConjecturedFeasible => true,
            Status::Infeasible => false,
            Status::OutOfCharacterizedRange => oracle::necessary_conditions(d, n, e).is_empty(),
        },
        Err(_) => false,
    }
}

fn partitions(t: usize, max: usize) -> Vec<Vec<usize>> {
    if t == 0 {
        return vec![vec![]];
    }
    (1..=t.min(max))
        .rev()
        .flat_map(|a| {
            partitions(t - a, a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

/// Seeds whose closed-form pair equals `p`, in search order.
fn seed_candidates(p: FPair) -> Vec<Seed> {
    let FPair { d, f0: n, f1: e } = p;
    let mut out = Vec::new();
    if d == 2 {
        if n == e && n >= 3 {
            out.push(Seed::Polygon { n });
        }
        return out;
    }
    out.push(Seed::Simplex { dim: d });
    if n >= d + 2 {
        out.push(Seed::Cyclic { n, dim: d });
    }
    for dims in partitions(d, d - 1) {
        if dims.iter().all(|&a| a == 1) {
            out.push(Seed::Cube { dim: d });
        } else {
            let mut dims = dims;
            dims.reverse();
            out.push(Seed::SimplexProduct { dims });
        }
    }
    if d >= 4 && n >= d + 2 {
        out.push(Seed::Join {
            a: Box::new(Seed::Polygon { n: n + 2 - d }),
            b: Box::new(Seed::Simplex { dim: d - 3 }),
        });
    }
    if d == 5 {
        for m in 3..=n / 2 {
            if n - m >= 3 {
                out.push(Seed::Join {
                    a: Box::new(Seed::Polygon { n: m }),
                    b: Box::new(Seed::Polygon { n: n - m }),
                });
            }
        }
    }
    out.retain(|s| {
        let f = s.fvector();
        f[0] == n && f[1] == e
    });
    out
}

/// Summands for dual-level connected sums: each has a simplex facet, and the
/// sum's polar adds `facets − 2` vertices and `ridges − d` edges to a polytope
/// with a simple vertex.
fn build_stock(d: usize) -> Vec<StockItem> {
    let mut recipes = Vec::new();
    if d >= 4 {
        recipes.push(Recipe::seed_only(Seed::Join {
            a: Box::new(Seed::Polygon { n: 4 }),
            b: Box::new(Seed::Simplex { dim: d - 3 }),
        }));
    }
    recipes.push(Recipe::seed_only(Seed::Cyclic { n: d + 2, dim: d }));
    recipes.push(Recipe::new(
        Seed::SimplexProduct { dims: vec![1, d - 1] },
        vec![OpStep::PolarDual],
    ));
    recipes.push(Recipe::seed_only(Seed::Cyclic { n: d + 3, dim: d }));
    recipes
        .into_iter()
        .filter_map(|recipe| {
            let stage = recipe.execute_stage().ok()?;
            if stage.lattice.simplex_facets().is_empty() {
                return None;
            }
            let f = stage.lattice.fvector();
            let (facets, ridges) = (f[d - 1], f[d - 2]);
            Some(StockItem {
                recipe,
                stage: Rc::new(stage),
                facets,
                ridges,
            })
        })
        .collect()
}

/// Breadth-first over stellar subdivisions of edges and triangles, starting
/// from every cyclic 4-polytope with at most `nmax` vertices. The first state
/// to reach a pair is kept, so entries with at most `nmax` vertices do not
/// depend on `nmax`.
fn build_stellar(nmax: usize) -> StellarStock {
    let mut entries = BTreeMap::new();
    let mut queue = VecDeque::new();
    for m in 5..=nmax {
        let recipe = Recipe::seed_only(Seed::Cyclic { n: m, dim: 4 });
        if let Ok(stage) = recipe.execute_stage() {
            let f = Found {
                recipe,
                stage: Rc::new(stage),
            };
            let p = f.stage.lattice.fpair();
            if let std::collections::btree_map::Entry::Vacant(slot) = entries.entry((p.f0, p.f1)) {
                slot.insert(f.clone());
                queue.push_back(f);
            }
        }
    }
    while let Some(cur) = queue.pop_front() {
        let l = &cur.stage.lattice;
        let p = l.fpair();
        if p.f0 >= nmax {
            continue;
        }
        let options: BTreeSet<(usize, usize)> = (1..=2)
            .flat_map(|k| l.faces(k).iter().map(move |face| (k, l.star_vertices(face).len())))
            .collect();
        for (face_dim, star_size) in options {
            let next = (p.f0 + 1, p.f1 + star_size - usize::from(face_dim == 1));
            if entries.contains_key(&next) {
                continue;
            }
            let step = OpStep::StellarSubdivision { face_dim, star_size };
            let Ok(stage) = step.apply(&cur.stage) else { continue };
            let q = stage.lattice.fpair();
            if let std::collections::btree_map::Entry::Vacant(slot) = entries.entry((q.f0, q.f1)) {
                let f = Found {
                    recipe: cur.recipe.then(step),
                    stage: Rc::new(stage),
                };
                slot.insert(f.clone());
                queue.push_back(f);
            }
        }
    }
    StellarStock { nmax, entries }
}
