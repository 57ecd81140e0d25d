//! Exact rational geometry: points, V-polytopes, canonical hyperplanes and
//! facet enumeration.
//!
//! Supported ambient dimensions are 3 through 7. Dimension 2 works as an
//! embedded mode for small tests, and joins accept operands of dimension 0 and 1.

mod hull;
mod linalg;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use linalg::{affine_rank, rank};
pub(crate) use linalg::{inverse, nullspace};

/// Exact arbitrary-precision rational, always in lowest terms.
pub type Rational = BigRational;

/// Highest ambient dimension handled by the toolkit.
pub const MAX_DIM: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate polytope: affine rank {rank} is below dimension {dim}")]
    Degenerate { rank: usize, dim: usize },
    #[error("redundant point at index {index}: not a vertex of the convex hull")]
    RedundantPoint { index: usize },
    #[error("duplicate point at index {index} (same as index {first})")]
    DuplicatePoint { index: usize, first: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("zero normal vector")]
    ZeroNormal,
    #[error("invalid rational {0:?}: expected \"p\" or \"p/q\" in lowest terms with q > 0")]
    InvalidRational(String),
    #[error("malformed polytope JSON: {0}")]
    Json(String),
}

/// Parses `"p"` or `"p/q"` and rejects anything that is not already canonical.
pub fn parse_rational(s: &str) -> Result<Rational, GeometryError> {
    let bad = || GeometryError::InvalidRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (s, None),
    };
    let strict_int = |t: &str| -> Option<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return None;
        }
        if t.starts_with('-') && digits == "0" {
            return None;
        }
        BigInt::from_str(t).ok()
    };
    let p = strict_int(num).ok_or_else(bad)?;
    match den {
        None => Ok(Rational::from_integer(p)),
        Some(q) => {
            let q = strict_int(q).ok_or_else(bad)?;
            if !q.is_positive() || q.is_one() || !p.gcd(&q).is_one() {
                return Err(bad());
            }
            Ok(Rational::new_raw(p, q))
        }
    }
}

pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Serde adapter writing a rational as its canonical `"p/q"` string.
pub mod rational_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

/// A point of `R^d` with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, v: &[Rational]) -> Rational {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// `self + t (other - self)`.
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + (b - a) * t).collect())
    }

    /// Appends coordinates, embedding into a higher-dimensional space.
    pub fn extended(&self, extra: &[Rational]) -> Point {
        let mut c = self.0.clone();
        c.extend_from_slice(extra);
        Point(c)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn centroid(points: &[Point]) -> Point {
    let dim = points[0].dim();
    let n = Rational::from_integer(BigInt::from(points.len()));
    let mut sum = vec![Rational::zero(); dim];
    for p in points {
        for (s, c) in sum.iter_mut().zip(p.coords()) {
            *s += c;
        }
    }
    Point(sum.into_iter().map(|s| s / &n).collect())
}

/// `{x : normal·x = offset}` with a positively rescaled normal whose first
/// nonzero entry is `±1`. The scaling keeps the orientation of the
/// inequality `normal·x ≤ offset`, so two facets are equal iff their
/// hyperplanes are syntactically equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vec<Rational>,
    offset: Rational,
}

impl Hyperplane {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Self, GeometryError> {
        let lead = normal
            .iter()
            .find(|x| !x.is_zero())
            .ok_or(GeometryError::ZeroNormal)?
            .abs();
        Ok(Hyperplane {
            normal: normal.iter().map(|x| x / &lead).collect(),
            offset: offset / lead,
        })
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// `normal·x − offset`; negative strictly inside the half-space.
    pub fn eval(&self, x: &Point) -> Rational {
        x.dot(&self.normal) - &self.offset
    }

    /// The hyperplane spanned by `points` (affine rank `d − 1` required),
    /// oriented so that `inside` satisfies `normal·x < offset`.
    pub fn through(points: &[Point], inside: &Point) -> Option<Hyperplane> {
        let dim = inside.dim();
        let base = &points[0];
        let rows: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.sub(base).into_coords()).collect();
        let ns = nullspace(&rows, dim);
        if ns.len() != 1 {
            return None;
        }
        let normal = ns.into_iter().next().unwrap();
        let offset = base.dot(&normal);
        let side = inside.dot(&normal) - &offset;
        if side.is_zero() {
            return None;
        }
        let (normal, offset) = if side.is_positive() {
            (normal.into_iter().map(|x| -x).collect(), -offset)
        } else {
            (normal, offset)
        };
        Hyperplane::new(normal, offset).ok()
    }
}

/// A facet: its supporting hyperplane and the sorted indices of the vertices on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    pub plane: Hyperplane,
    pub incident: Vec<usize>,
}

/// Full-dimensional polytope given by its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Point>,
}

impl VPolytope {
    /// Validates coordinate lengths, distinctness and full dimensionality.
    /// Extremeness of every point is checked by [`facet_enumeration`].
    pub fn new(dim: usize, vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::EmptyPointSet);
        }
        if dim > MAX_DIM {
            return Err(GeometryError::UnsupportedDimension(dim));
        }
        if let Some(bad) = vertices.iter().find(|p| p.dim() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let mut seen = std::collections::HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if let Some(&first) = seen.get(v) {
                return Err(GeometryError::DuplicatePoint { index: i, first });
            }
            seen.insert(v, i);
        }
        let r = affine_rank(&vertices)?;
        if r != dim {
            return Err(GeometryError::Degenerate { rank: r, dim });
        }
        Ok(VPolytope { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn nvertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn centroid(&self) -> Point {
        centroid(&self.vertices)
    }

    /// Scales all coordinates by one positive rational so that they become
    /// coprime integers. Combinatorics are unchanged.
    pub fn normalized_scale(&self) -> VPolytope {
        let mut lcm = BigInt::one();
        for c in self.vertices.iter().flat_map(|p| p.coords()) {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.vertices.iter().flat_map(|p| p.coords()) {
            g = g.gcd(&(c.numer() * (&lcm / c.denom())));
        }
        if g.is_zero() {
            return self.clone();
        }
        let s = Rational::new(lcm, g);
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|p| p.scale(&s)).collect(),
        }
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dimension: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|p| p.coords().iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &PolytopeJson) -> Result<Self, GeometryError> {
        let vertices = json
            .vertices
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
            .map(|r| r.map(Point::new))
            .collect::<Result<Vec<_>, _>>()?;
        VPolytope::new(json.dimension, vertices)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("polytope JSON serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, GeometryError> {
        let json: PolytopeJson = serde_json::from_str(s).map_err(|e| GeometryError::Json(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Wire format: `{"dimension": d, "vertices": [["p", "p/q", ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dimension: usize,
    pub vertices: Vec<Vec<String>>,
}

/// All facets of `p`, sorted by their incident vertex lists.
pub fn facet_enumeration(p: &VPolytope) -> Result<Vec<Facet>, GeometryError> {
    let hull = hull::convex_hull(p.dim, &p.vertices)?;
    if let Some(index) = hull.is_vertex.iter().position(|v| !v) {
        return Err(GeometryError::RedundantPoint { index });
    }
    let mut facets: Vec<Facet> = hull
        .planes
        .into_iter()
        .zip(hull.incidence)
        .map(|(plane, inc)| Facet {
            plane,
            incident: inc.ones().collect(),
        })
        .collect();
    facets.sort_by(|a, b| a.incident.cmp(&b.incident));
    Ok(facets)
}

/// The points of `points` that are vertices of their convex hull, in input
/// order; repeated points are kept once.
pub fn extreme_points(points: &[Point], dim: usize) -> Result<Vec<Point>, GeometryError> {
    let hull = hull::convex_hull(dim, points)?;
    let mut seen = std::collections::HashSet::new();
    Ok(points
        .iter()
        .zip(hull.is_vertex)
        .filter(|(p, v)| *v && seen.insert((*p).clone()))
        .map(|(p, _)| p.clone())
        .collect())
}
