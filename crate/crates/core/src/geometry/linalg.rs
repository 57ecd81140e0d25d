use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{GeometryError, Point, Rational};

/// Gaussian elimination in place; returns the pivot columns of the echelon form.
pub(crate) fn row_reduce(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in c..ncols {
                    let delta = &f * &rows[r][k];
                    rows[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Basis of the right null space of `rows` (each row of length `ncols`).
pub(crate) fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix by Gauss–Jordan elimination; `None` if singular.
pub(crate) fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Dimension of the affine hull of a point set, computed exactly.
pub fn affine_rank(points: &[Point]) -> Result<usize, GeometryError> {
    let first = points.first().ok_or(GeometryError::EmptyPointSet)?;
    let dim = first.dim();
    if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
        return Err(GeometryError::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.coords().iter().zip(first.coords()).map(|(a, b)| a - b).collect())
        .collect();
    Ok(rank(&diffs))
}

/// Scale a rational vector to a primitive integer vector with the same direction.
pub(crate) fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(ints)
}

pub(crate) fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Rank of a set of integer vectors, stopping early once `cap` is reached.
pub(crate) fn integer_rank(rows: &[&[BigInt]], cap: usize) -> usize {
    // fraction-free elimination on a running echelon basis
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for row in rows {
        let mut v = row.to_vec();
        for (pc, b) in &basis {
            if !v[*pc].is_zero() {
                let f = v[*pc].clone();
                let g = b[*pc].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x = &*x * &g - y * &f;
                }
                v = primitive(v);
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            if v[pc].is_negative() {
                v.iter_mut().for_each(|x| *x = -&*x);
            }
            basis.push((pc, v));
            if basis.len() >= cap {
                break;
            }
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> Point {
        Point::from_ints(c)
    }

    #[test]
    fn rank_of_single_point_is_zero() {
        assert_eq!(affine_rank(&[pt(&[1, 2, 3])]).unwrap(), 0);
    }

    #[test]
    fn simplex_is_full_dimensional() {
        let mut pts = vec![pt(&[0, 0, 0, 0])];
        for i in 0..4 {
            let mut c = [0i64; 4];
            c[i] = 1;
            pts.push(pt(&c));
        }
        assert_eq!(affine_rank(&pts).unwrap(), 4);
    }

    #[test]
    fn collinear_points_have_rank_one() {
        // points a + t(b - a) on the line through (1,2,3) with direction (2,-1,1/2)
        let line: Vec<Point> = [0i64, 1, 3, -2]
            .iter()
            .map(|&t| {
                Point::new(vec![
                    Rational::from_integer((1 + 2 * t).into()),
                    Rational::from_integer((2 - t).into()),
                    Rational::new((6 + t).into(), 2.into()),
                ])
            })
            .collect();
        assert_eq!(affine_rank(&line).unwrap(), 1);
    }

    #[test]
    fn affine_rank_errors() {
        assert_eq!(affine_rank(&[]), Err(GeometryError::EmptyPointSet));
        let err = affine_rank(&[pt(&[0, 0]), pt(&[0, 0, 1])]).unwrap_err();
        assert!(err.to_string().contains("dimension mismatch"));
    }

    #[test]
    fn inverse_round_trip() {
        let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
        let m = vec![vec![r(2, 1), r(1, 3)], vec![r(-1, 1), r(0, 1)]];
        let inv = inverse(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let prod: Rational = (0..2).map(|k| &m[i][k] * &inv[k][j]).sum();
                assert_eq!(prod, if i == j { r(1, 1) } else { r(0, 1) });
            }
        }
        assert!(inverse(&[vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(4, 1)]]).is_none());
    }

    #[test]
    fn nullspace_of_plane() {
        let rows = vec![vec![Rational::one(), Rational::one(), Rational::zero()]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&v[0] + &v[1]).is_zero());
        }
    }
}
