use std::collections::HashSet;

use num_traits::{One, Zero};

use super::ConstructionError;
use crate::geometry::{Point, Rational, VPolytope, MAX_DIM};

fn check_range(dim: usize) -> Result<(), ConstructionError> {
    if (3..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(ConstructionError::DimensionOutOfRange(dim))
    }
}

/// Origin and the standard basis vectors, in any dimension.
pub(crate) fn simplex_points(d: usize) -> Vec<Point> {
    let mut pts = vec![Point::origin(d)];
    for i in 0..d {
        let mut c = vec![Rational::zero(); d];
        c[i] = Rational::one();
        pts.push(Point::new(c));
    }
    pts
}

/// Standard d-simplex, `3 ≤ d ≤ 7`.
pub fn gen_simplex(d: usize) -> Result<VPolytope, ConstructionError> {
    check_range(d)?;
    Ok(VPolytope::new(d, simplex_points(d))?)
}

/// Points `(t, t², …, t^d)` for the given parameters.
pub fn gen_cyclic_with_params(params: &[Rational], d: usize) -> Result<VPolytope, ConstructionError> {
    if d < 2 || d > MAX_DIM {
        return Err(ConstructionError::DimensionOutOfRange(d));
    }
    if params.len() < d + 1 {
        return Err(ConstructionError::InvalidParameters(format!(
            "cyclic polytope needs at least {} points, got {}",
            d + 1,
            params.len()
        )));
    }
    let mut seen = HashSet::new();
    if let Some(dup) = params.iter().find(|t| !seen.insert(*t)) {
        return Err(ConstructionError::InvalidParameters(format!(
            "parameter collision at t = {dup}"
        )));
    }
    let pts = params
        .iter()
        .map(|t| {
            let mut c = Vec::with_capacity(d);
            let mut power = Rational::one();
            for _ in 0..d {
                power *= t;
                c.push(power.clone());
            }
            Point::new(c)
        })
        .collect();
    Ok(VPolytope::new(d, pts)?)
}

/// Cyclic polytope C(n, d) on the moment curve at t = 1..n.
pub fn gen_cyclic(n: usize, d: usize) -> Result<VPolytope, ConstructionError> {
    let params: Vec<Rational> = (1..=n).map(|t| Rational::from_integer(t.into())).collect();
    gen_cyclic_with_params(&params, d)
}

/// Product of standard simplices; vertices in lexicographic order of the factors.
pub fn gen_simplex_product(dims: &[usize]) -> Result<VPolytope, ConstructionError> {
    let d: usize = dims.iter().sum();
    if dims.is_empty() || dims.contains(&0) {
        return Err(ConstructionError::InvalidParameters(format!(
            "simplex product factors must be positive, got {dims:?}"
        )));
    }
    if d > MAX_DIM {
        return Err(ConstructionError::DimensionOutOfRange(d));
    }
    let mut pts = vec![Point::origin(0)];
    for &a in dims {
        let factor = simplex_points(a);
        pts = pts
            .iter()
            .flat_map(|p| factor.iter().map(move |q| p.extended(q.coords())))
            .collect();
    }
    Ok(VPolytope::new(d, pts)?)
}

/// The 0/1 cube, as the product of d segments.
pub fn gen_cube(d: usize) -> Result<VPolytope, ConstructionError> {
    if d == 0 {
        return Err(ConstructionError::DimensionOutOfRange(d));
    }
    gen_simplex_product(&vec![1; d])
}

/// Convex n-gon with vertices `(t, t²)`, t = 0..n−1.
pub fn gen_polygon(n: usize) -> Result<VPolytope, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::InvalidParameters(format!(
            "polygon needs 3 vertices, got {n}"
        )));
    }
    let params: Vec<Rational> = (0..n).map(|t| Rational::from_integer(t.into())).collect();
    gen_cyclic_with_params(&params, 2)
}

/// `A` at height 0 and `B` at height 1 in complementary coordinates.
pub fn gen_join(a: &VPolytope, b: &VPolytope) -> Result<VPolytope, ConstructionError> {
    let (da, db) = (a.dim(), b.dim());
    let d = da + db + 1;
    if d > MAX_DIM {
        return Err(ConstructionError::DimensionOutOfRange(d));
    }
    let zeros = |k: usize| vec![Rational::zero(); k];
    let mut pts: Vec<Point> = a
        .vertices()
        .iter()
        .map(|p| p.extended(&zeros(db)).extended(&[Rational::zero()]))
        .collect();
    pts.extend(
        b.vertices()
            .iter()
            .map(|q| Point::new(zeros(da)).extended(q.coords()).extended(&[Rational::one()])),
    );
    Ok(VPolytope::new(d, pts)?)
}

/// A single point, the 0-dimensional polytope used as a join operand.
#[cfg(test)]
pub(crate) fn point_polytope() -> VPolytope {
    VPolytope::new(0, vec![Point::origin(0)]).expect("a point is a 0-polytope")
}
