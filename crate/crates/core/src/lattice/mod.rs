//! Face lattices built from vertex–facet incidences.

mod graph;

use std::collections::{BTreeMap, HashSet};

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{facet_enumeration, Facet, GeometryError, Point, VPolytope};

pub use graph::{vertex_connectivity_at_least, PolytopeGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("inconsistent incidence: {0}")]
    InconsistentIncidence(String),
    #[error("malformed lattice JSON: {0}")]
    Json(String),
}

/// A (d, f0, f1) triple. The excess degree is always derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FPair {
    pub d: usize,
    pub f0: usize,
    pub f1: usize,
}

impl FPair {
    pub fn new(d: usize, f0: usize, f1: usize) -> Self {
        FPair { d, f0, f1 }
    }

    /// `2 f1 − d f0`.
    pub fn excess(&self) -> i64 {
        2 * self.f1 as i64 - (self.d * self.f0) as i64
    }
}

impl std::fmt::Display for FPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "d={} ({}, {})", self.d, self.f0, self.f1)
    }
}

/// Number of 2-faces with k vertices, for each k.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GonCensus {
    pub counts: BTreeMap<usize, usize>,
}

impl GonCensus {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn get(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }
}

/// Graded face poset of a d-polytope, faces stored as sorted vertex index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    dim: usize,
    nvertices: usize,
    facets: Vec<Vec<usize>>,
    faces_by_dim: Vec<Vec<Vec<usize>>>,
    fvector: Vec<usize>,
}

fn to_bits(n: usize, set: &[usize]) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    set.iter().for_each(|&i| b.insert(i));
    b
}

impl FaceLattice {
    /// Closes facet incidences into the full lattice. Facet order is kept, so
    /// vertex `i` of [`FaceLattice::dual`] is facet `i` of `self`.
    pub fn from_facets(dim: usize, nvertices: usize, facets: Vec<Vec<usize>>) -> Result<Self, LatticeError> {
        let bad = |msg: String| Err(LatticeError::InconsistentIncidence(msg));
        if dim == 0 {
            return bad("dimension 0 has no facets".into());
        }
        let mut facets = facets;
        for f in facets.iter_mut() {
            f.sort_unstable();
            f.dedup();
            if f.iter().any(|&v| v >= nvertices) {
                return bad(format!("facet {f:?} names a vertex out of range"));
            }
            if f.len() < dim {
                return bad(format!("facet {f:?} has fewer than {dim} vertices"));
            }
        }
        let facet_bits: Vec<FixedBitSet> = facets.iter().map(|f| to_bits(nvertices, f)).collect();
        if facet_bits.iter().collect::<HashSet<_>>().len() != facets.len() {
            return bad("repeated facet".into());
        }

        let mut levels: Vec<Vec<FixedBitSet>> = vec![Vec::new(); dim];
        levels[dim - 1] = facet_bits.clone();
        for k in (1..dim).rev() {
            let mut next: HashSet<FixedBitSet> = HashSet::new();
            for face in &levels[k] {
                let mut cands: Vec<FixedBitSet> = Vec::new();
                for h in &facet_bits {
                    if face.is_subset(h) {
                        continue;
                    }
                    let mut c = face.clone();
                    c.intersect_with(h);
                    if c.count_ones(..) >= k && !cands.contains(&c) {
                        cands.push(c);
                    }
                }
                for (i, c) in cands.iter().enumerate() {
                    let maximal = cands.iter().enumerate().all(|(j, o)| i == j || !c.is_subset(o));
                    if maximal {
                        next.insert(c.clone());
                    }
                }
            }
            levels[k - 1] = next.into_iter().collect();
        }

        if levels[0].len() != nvertices || levels[0].iter().any(|f| f.count_ones(..) != 1) {
            return bad(format!(
                "closure produced {} minimal faces for {} vertices",
                levels[0].len(),
                nvertices
            ));
        }
        for v in 0..nvertices {
            let on = facet_bits.iter().filter(|f| f.contains(v)).count();
            if on < dim {
                return bad(format!("vertex {v} lies on only {on} facets"));
            }
        }

        let faces_by_dim: Vec<Vec<Vec<usize>>> = levels
            .iter()
            .map(|lvl| {
                let mut v: Vec<Vec<usize>> = lvl.iter().map(|b| b.ones().collect()).collect();
                v.sort();
                v
            })
            .collect();
        let fvector: Vec<usize> = faces_by_dim.iter().map(Vec::len).collect();
        let lattice = FaceLattice {
            dim,
            nvertices,
            facets,
            faces_by_dim,
            fvector,
        };
        if !lattice.euler_holds() {
            return bad(format!("Euler relation fails for f-vector {:?}", lattice.fvector));
        }
        if dim >= 2 {
            for (k, lvl) in lattice.faces_by_dim[..dim - 1].iter().enumerate() {
                for face in lvl {
                    let fb = to_bits(nvertices, face);
                    if facet_bits.iter().filter(|f| fb.is_subset(f)).count() < 2 {
                        return bad(format!("{k}-face {face:?} lies on fewer than two facets"));
                    }
                }
            }
        }
        Ok(lattice)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvertices(&self) -> usize {
        self.nvertices
    }

    /// Facets in construction order.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Sorted k-faces for `0 ≤ k < d`.
    pub fn faces(&self, k: usize) -> &[Vec<usize>] {
        &self.faces_by_dim[k]
    }

    pub fn fvector(&self) -> &[usize] {
        &self.fvector
    }

    pub fn fpair(&self) -> FPair {
        FPair::new(self.dim, self.fvector[0], self.fvector.get(1).copied().unwrap_or(0))
    }

    /// `Σ (−1)^k f_k = 1 − (−1)^d`.
    pub fn euler_holds(&self) -> bool {
        let alt: i64 = self
            .fvector
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum();
        alt == if self.dim % 2 == 0 { 0 } else { 2 }
    }

    pub fn graph(&self) -> PolytopeGraph {
        let edges: Vec<(usize, usize)> = if self.dim >= 2 {
            self.faces_by_dim[1].iter().map(|e| (e[0], e[1])).collect()
        } else {
            vec![(0, 1)]
        };
        PolytopeGraph::new(self.nvertices, edges)
    }

    /// Vertices of degree exactly d.
    pub fn simple_vertices(&self) -> Vec<usize> {
        let g = self.graph();
        (0..self.nvertices).filter(|&v| g.degrees()[v] == self.dim).collect()
    }

    /// Edges with both endpoints simple that lie on exactly d − 1 facets.
    pub fn simple_edges(&self) -> Vec<(usize, usize)> {
        let g = self.graph();
        let simple = |v: usize| g.degrees()[v] == self.dim;
        g.edges()
            .iter()
            .copied()
            .filter(|&(u, v)| simple(u) && simple(v))
            .filter(|&(u, v)| self.facets.iter().filter(|f| f.contains(&u) && f.contains(&v)).count() == self.dim - 1)
            .collect()
    }

    /// Indices of facets with exactly d vertices.
    pub fn simplex_facets(&self) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| self.facets[i].len() == self.dim)
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        self.simple_vertices().len() == self.nvertices
    }

    pub fn is_simplicial(&self) -> bool {
        self.facets.iter().all(|f| f.len() == self.dim)
    }

    pub fn gon_census(&self) -> GonCensus {
        let mut counts = BTreeMap::new();
        if self.dim >= 3 {
            for face in &self.faces_by_dim[2] {
                *counts.entry(face.len()).or_insert(0) += 1;
            }
        }
        GonCensus { counts }
    }

    /// Indices of the facets containing `face`.
    pub fn facets_containing(&self, face: &[usize]) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| face.iter().all(|v| self.facets[i].binary_search(v).is_ok()))
            .collect()
    }

    /// Union of the vertex sets of all facets containing `face`.
    pub fn star_vertices(&self, face: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .facets_containing(face)
            .into_iter()
            .flat_map(|i| self.facets[i].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Order-reversed lattice: vertex `i` of the dual is facet `i` here and
    /// facet `v` of the dual collects the facets through vertex `v`.
    pub fn dual(&self) -> FaceLattice {
        let facets: Vec<Vec<usize>> = (0..self.nvertices)
            .map(|v| {
                (0..self.facets.len())
                    .filter(|&i| self.facets[i].binary_search(&v).is_ok())
                    .collect()
            })
            .collect();
        FaceLattice::from_facets(self.dim, self.facets.len(), facets).expect("dual of a valid lattice is valid")
    }

    /// Facet sets as a sorted list, independent of facet order.
    pub fn canonical_facets(&self) -> Vec<Vec<usize>> {
        self.faces_by_dim[self.dim - 1].clone()
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            dimension: self.dim,
            fvector: self.fvector.clone(),
            facets: self.canonical_facets(),
        }
    }

    pub fn from_json(json: &LatticeJson) -> Result<Self, LatticeError> {
        let n = json.facets.iter().flatten().max().map_or(0, |m| m + 1);
        let l = FaceLattice::from_facets(json.dimension, n, json.facets.clone())?;
        if l.fvector != json.fvector {
            return Err(LatticeError::Json(format!(
                "declared f-vector {:?} differs from computed {:?}",
                json.fvector, l.fvector
            )));
        }
        Ok(l)
    }
}

/// Wire format: `{"dimension": d, "fvector": [...], "facets": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub dimension: usize,
    pub fvector: Vec<usize>,
    pub facets: Vec<Vec<usize>>,
}

pub fn build_face_lattice(p: &VPolytope, facets: &[Facet]) -> Result<FaceLattice, LatticeError> {
    FaceLattice::from_facets(
        p.dim(),
        p.nvertices(),
        facets.iter().map(|f| f.incident.clone()).collect(),
    )
}

/// Facet enumeration followed by lattice closure.
pub fn lattice_of(p: &VPolytope) -> Result<FaceLattice, LatticeError> {
    let facets = facet_enumeration(p)?;
    build_face_lattice(p, &facets)
}

pub fn combinatorial_dual(l: &FaceLattice) -> FaceLattice {
    l.dual()
}

/// Polar of `p` about its vertex centroid. Vertex `i` of the result is dual to
/// facet `i` of `facet_enumeration(p)`.
pub fn polar_dual(p: &VPolytope) -> Result<VPolytope, GeometryError> {
    let c = p.centroid();
    let facets = facet_enumeration(p)?;
    let verts = facets
        .iter()
        .map(|f| {
            let h = f.plane.offset() - c.dot(f.plane.normal());
            debug_assert!(h.is_positive() && !h.is_zero());
            Point::new(f.plane.normal().iter().map(|a| a / &h).collect())
        })
        .collect();
    VPolytope::new(p.dim(), verts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rational;
    use num_integer::binomial;

    fn simplex(d: usize) -> VPolytope {
        let mut vs = vec![Point::origin(d)];
        for i in 0..d {
            let mut c = vec![0i64; d];
            c[i] = 1;
            vs.push(Point::from_ints(&c));
        }
        VPolytope::new(d, vs).unwrap()
    }

    fn cube(d: usize) -> VPolytope {
        let pts = (0..1u32 << d)
            .map(|m| Point::from_ints(&(0..d).map(|i| ((m >> i) & 1) as i64).collect::<Vec<_>>()))
            .collect();
        VPolytope::new(d, pts).unwrap()
    }

    /// Δ_a × Δ_b with standard simplices.
    fn product(a: usize, b: usize) -> VPolytope {
        let sa = simplex(a);
        let sb = simplex(b);
        let mut pts = Vec::new();
        for x in sa.vertices() {
            for y in sb.vertices() {
                pts.push(x.extended(y.coords()));
            }
        }
        VPolytope::new(a + b, pts).unwrap()
    }

    #[test]
    fn simplex_fvector() {
        let l = lattice_of(&simplex(6)).unwrap();
        assert_eq!(l.fvector(), &[7, 21, 35, 35, 21, 7]);
        assert_eq!(l.fpair(), FPair::new(6, 7, 21));
        assert_eq!(l.fpair().excess(), 0);
        assert_eq!(l.gon_census().counts, BTreeMap::from([(3, 35)]));
        assert_eq!(l.simple_vertices().len(), 7);
    }

    #[test]
    fn cube_fvector_matches_binomial_formula() {
        let l = lattice_of(&cube(6)).unwrap();
        let expected: Vec<usize> = (0..6).map(|k| binomial(6usize, k) * (1usize << (6 - k))).collect();
        assert_eq!(l.fvector(), expected.as_slice());
        assert_eq!(l.fvector(), &[64, 192, 240, 160, 60, 12]);
        assert_eq!(l.gon_census().counts, BTreeMap::from([(4, 240)]));
        assert_eq!(l.simple_edges().len(), 192);
    }

    #[test]
    fn prism_over_five_simplex() {
        let l = lattice_of(&product(1, 5)).unwrap();
        assert_eq!(l.fpair(), FPair::new(6, 12, 36));
        // 20 triangles in each simplex copy plus the edge × edge squares
        assert_eq!(l.gon_census().counts, BTreeMap::from([(3, 40), (4, 15)]));
        assert_eq!(l.gon_census().total(), l.fvector()[2]);
    }

    #[test]
    fn delta_33_edges_are_all_simple() {
        let l = lattice_of(&product(3, 3)).unwrap();
        assert_eq!(l.fpair(), FPair::new(6, 16, 48));
        assert_eq!(l.simple_edges().len(), 48);
        let dual = l.dual();
        assert_eq!(dual.fvector()[5], 16);
        assert_eq!(dual.fvector()[4], 48);
    }

    #[test]
    fn pyramid_apex_is_not_simple() {
        // pyramid over a 5-dimensional prism Δ_{1,4}: 10 base vertices
        let base = product(1, 4);
        let mut pts: Vec<Point> = base
            .vertices()
            .iter()
            .map(|p| p.extended(&[Rational::zero()]))
            .collect();
        pts.push(base.centroid().extended(&[Rational::from_integer(1.into())]));
        let l = lattice_of(&VPolytope::new(6, pts).unwrap()).unwrap();
        assert_eq!(l.fpair(), FPair::new(6, 11, 35));
        assert_eq!(l.fpair().excess(), 4);
        assert!(!l.simple_vertices().contains(&10));
        assert_eq!(l.graph().degrees()[10], 10);
        assert!(l.simple_edges().iter().all(|&(u, v)| u != 10 && v != 10));
    }

    #[test]
    fn dual_reverses_fvector_and_is_an_involution() {
        let l = lattice_of(&cube(6)).unwrap();
        let d = l.dual();
        assert_eq!(d.fvector(), &[12, 60, 160, 240, 192, 64]);
        assert_eq!(d.dual(), l);
        let s = lattice_of(&simplex(6)).unwrap();
        assert_eq!(s.dual().fvector(), s.fvector());
    }

    #[test]
    fn polar_realizes_the_combinatorial_dual() {
        let mut pts = cube(6).vertices().to_vec();
        let half = Rational::new(1.into(), 2.into());
        pts.iter_mut()
            .for_each(|p| *p = p.sub(&Point::new(vec![half.clone(); 6])));
        let centered = VPolytope::new(6, pts).unwrap();
        let polar = polar_dual(&centered).unwrap();
        assert_eq!(polar.nvertices(), 12);
        let l = lattice_of(&centered).unwrap();
        assert_eq!(
            lattice_of(&polar).unwrap().canonical_facets(),
            l.dual().canonical_facets()
        );

        let s = polar_dual(&simplex(6)).unwrap();
        assert_eq!(lattice_of(&s).unwrap().fvector(), &[7, 21, 35, 35, 21, 7]);
    }

    #[test]
    fn polar_of_cyclic_8_6() {
        let pts = (1..=8i64)
            .map(|t| Point::from_ints(&(1..=6u32).map(|k| t.pow(k)).collect::<Vec<_>>()))
            .collect();
        let c = VPolytope::new(6, pts).unwrap();
        let p = polar_dual(&c).unwrap();
        assert_eq!(p.nvertices(), 16);
        let l = lattice_of(&p).unwrap();
        assert_eq!(l.facets().len(), 8);
        assert_eq!(l.canonical_facets(), lattice_of(&c).unwrap().dual().canonical_facets());
    }

    #[test]
    fn json_round_trip() {
        let l = lattice_of(&product(2, 2)).unwrap();
        let json = serde_json::to_string(&l.to_json()).unwrap();
        assert!(json.starts_with("{\"dimension\":4,\"fvector\":[9,18,15,6]"));
        let back: LatticeJson = serde_json::from_str(&json).unwrap();
        assert_eq!(
            FaceLattice::from_json(&back).unwrap().canonical_facets(),
            l.canonical_facets()
        );
    }

    #[test]
    fn broken_incidence_is_rejected() {
        // a "tetrahedron" missing one facet
        let err = FaceLattice::from_facets(3, 4, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]]).unwrap_err();
        assert!(err.to_string().starts_with("inconsistent incidence"));
    }
}
