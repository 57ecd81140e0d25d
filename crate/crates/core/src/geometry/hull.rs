//! Double-description facet enumeration over exact integers.
//!
//! Facet inequalities of `conv(P)` are the extreme rays of the cone
//! `{(a, c) : a·x + c ≤ 0 for every x in P}`. Starting from the simplicial cone
//! spanned by `d + 1` affinely independent points, the remaining points are
//! inserted one at a time. Each ray keeps the set of processed points that are
//! tight on it; adjacency of rays is decided combinatorially from those sets.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{integer_rank, nullspace, primitive, row_reduce};
use super::{GeometryError, Hyperplane, Point, Rational};

struct Ray {
    coeffs: Vec<BigInt>,
    zeros: FixedBitSet,
}

pub(crate) struct Hull {
    pub planes: Vec<Hyperplane>,
    pub incidence: Vec<FixedBitSet>,
    pub is_vertex: Vec<bool>,
}

fn homogenize(p: &Point) -> Vec<BigInt> {
    let lcm = p.coords().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut h: Vec<BigInt> = p.coords().iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    h.push(lcm);
    primitive(h)
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Greedily picks `dim + 1` affinely independent points in input order.
fn initial_basis(rows: &[Vec<BigInt>], dim: usize) -> Result<Vec<usize>, GeometryError> {
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    let mut chosen = Vec::new();
    for (i, h) in rows.iter().enumerate() {
        let mut trial = echelon.clone();
        trial.push(h.iter().cloned().map(Rational::from_integer).collect());
        if row_reduce(&mut trial).len() > echelon.len() {
            echelon = trial;
            chosen.push(i);
            if chosen.len() == dim + 1 {
                return Ok(chosen);
            }
        }
    }
    Err(GeometryError::Degenerate {
        rank: chosen.len().saturating_sub(1),
        dim,
    })
}

pub(crate) fn convex_hull(dim: usize, points: &[Point]) -> Result<Hull, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyPointSet);
    }
    if dim == 0 {
        return Err(GeometryError::UnsupportedDimension(dim));
    }
    if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
        return Err(GeometryError::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let n = points.len();
    let rows: Vec<Vec<BigInt>> = points.iter().map(homogenize).collect();
    let basis = initial_basis(&rows, dim)?;

    let mut rays: Vec<Ray> = Vec::with_capacity(dim + 1);
    for (k, &i) in basis.iter().enumerate() {
        let others: Vec<Vec<Rational>> = basis
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &b)| rows[b].iter().cloned().map(Rational::from_integer).collect())
            .collect();
        let ns = nullspace(&others, dim + 1);
        debug_assert_eq!(ns.len(), 1);
        let mut coeffs = super::linalg::primitive_integer(&ns[0]);
        if dot(&coeffs, &rows[i]).is_positive() {
            coeffs.iter_mut().for_each(|x| *x = -&*x);
        }
        let mut zeros = FixedBitSet::with_capacity(n);
        for (j, &b) in basis.iter().enumerate() {
            if j != k {
                zeros.insert(b);
            }
        }
        rays.push(Ray { coeffs, zeros });
    }

    let mut in_basis = FixedBitSet::with_capacity(n);
    basis.iter().for_each(|&b| in_basis.insert(b));
    for p in (0..n).filter(|&p| !in_basis.contains(p)) {
        rays = insert_point(rays, &rows[p], p, dim);
    }

    let incidence: Vec<FixedBitSet> = rays.iter().map(|r| r.zeros.clone()).collect();
    let is_vertex = (0..n)
        .map(|j| {
            let normals: Vec<&[BigInt]> = rays
                .iter()
                .filter(|r| r.zeros.contains(j))
                .map(|r| &r.coeffs[..dim])
                .collect();
            normals.len() >= dim && integer_rank(&normals, dim) == dim
        })
        .collect();
    let planes = rays
        .iter()
        .map(|r| {
            let normal: Vec<Rational> = r.coeffs[..dim].iter().cloned().map(Rational::from_integer).collect();
            Hyperplane::new(normal, Rational::from_integer(-r.coeffs[dim].clone()))
                .expect("facet ray has a nonzero normal")
        })
        .collect();
    Ok(Hull {
        planes,
        incidence,
        is_vertex,
    })
}

fn insert_point(rays: Vec<Ray>, h: &[BigInt], p: usize, dim: usize) -> Vec<Ray> {
    let vals: Vec<BigInt> = rays.iter().map(|r| dot(&r.coeffs, h)).collect();
    if vals.iter().all(|v| !v.is_positive()) {
        // interior or boundary point: only record tightness
        let mut rays = rays;
        for (r, v) in rays.iter_mut().zip(&vals) {
            if v.is_zero() {
                r.zeros.insert(p);
            }
        }
        return rays;
    }
    let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
    let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();

    let mut created = Vec::new();
    for &i in &pos {
        for &j in &neg {
            let mut common = rays[i].zeros.clone();
            common.intersect_with(&rays[j].zeros);
            if common.count_ones(..) + 1 < dim {
                continue;
            }
            let adjacent = rays
                .iter()
                .enumerate()
                .all(|(k, r)| k == i || k == j || !common.is_subset(&r.zeros));
            if !adjacent {
                continue;
            }
            let a = &vals[i];
            let b = -&vals[j];
            let coeffs: Vec<BigInt> = rays[j]
                .coeffs
                .iter()
                .zip(&rays[i].coeffs)
                .map(|(x, y)| a * x + &b * y)
                .collect();
            common.insert(p);
            created.push(Ray {
                coeffs: primitive(coeffs),
                zeros: common,
            });
        }
    }

    let mut out: Vec<Ray> = rays
        .into_iter()
        .zip(vals)
        .filter(|(_, v)| !v.is_positive())
        .map(|(mut r, v)| {
            if v.is_zero() {
                r.zeros.insert(p);
            }
            r
        })
        .collect();
    out.extend(created);
    out
}
