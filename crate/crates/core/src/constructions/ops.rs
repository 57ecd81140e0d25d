use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ConstructionError, EdgeSelect, FacetSelect, Stage, VertexSelect};
use crate::geometry::{centroid, inverse, Point, Rational, VPolytope, MAX_DIM};
use crate::lattice::{polar_dual, FaceLattice};

/// Retries for every halving schedule.
pub const PLACEMENT_RETRIES: usize = 64;

/// Largest exponent k tried for the connected-sum squash factor 2^k.
pub const SQUASH_STEPS: u32 = 48;

fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

pub(crate) fn select_facet(l: &FaceLattice, sel: FacetSelect) -> Result<usize, ConstructionError> {
    match sel {
        FacetSelect::First => Ok(0),
        FacetSelect::FirstSimplex => l
            .simplex_facets()
            .first()
            .copied()
            .ok_or(ConstructionError::NoSimplexFacet),
    }
}

/// Apex above the vertex centroid in a new last coordinate.
pub fn op_pyramid(p: &VPolytope) -> Result<VPolytope, ConstructionError> {
    let d = p.dim() + 1;
    if d > MAX_DIM {
        return Err(ConstructionError::DimensionOutOfRange(d));
    }
    let mut pts: Vec<Point> = p.vertices().iter().map(|v| v.extended(&[Rational::zero()])).collect();
    pts.push(p.centroid().extended(&[Rational::one()]));
    Ok(VPolytope::new(d, pts)?)
}

/// Stacks a new vertex beyond the selected facet and beneath all others.
pub fn op_pyramid_over_facet(s: &Stage, sel: FacetSelect) -> Result<VPolytope, ConstructionError> {
    let fi = select_facet(&s.lattice, sel)?;
    let facet = &s.facets[fi];
    let verts = s.polytope.vertices();
    let fc = centroid(&facet.incident.iter().map(|&i| verts[i].clone()).collect::<Vec<_>>());
    let dir = fc.sub(&s.polytope.centroid());
    let mut lambda = Rational::one();
    for _ in 0..PLACEMENT_RETRIES {
        let apex = fc.add(&dir.scale(&lambda));
        let ok = s.facets.iter().enumerate().all(|(j, f)| {
            let v = f.plane.eval(&apex);
            if j == fi {
                v.is_positive()
            } else {
                v.is_negative()
            }
        });
        if ok {
            let mut pts = verts.to_vec();
            pts.push(apex);
            return Ok(VPolytope::new(s.polytope.dim(), pts)?);
        }
        lambda *= half();
    }
    Err(ConstructionError::ApexPlacementFailed)
}

/// Cuts off the vertices in `cut` with a hyperplane whose normal is the sum of
/// the normals of the facets containing all of them. New vertices sit on the
/// edges leaving `cut`; the remaining vertices keep their order.
fn truncate_face(s: &Stage, cut: &[usize]) -> Result<VPolytope, ConstructionError> {
    let d = s.polytope.dim();
    let verts = s.polytope.vertices();
    let mut w = vec![Rational::zero(); d];
    for fi in s.lattice.facets_containing(cut) {
        for (wi, a) in w.iter_mut().zip(s.facets[fi].plane.normal()) {
            *wi += a;
        }
    }
    let top = verts[cut[0]].dot(&w);
    if cut.iter().any(|&i| verts[i].dot(&w) != top) {
        return Err(ConstructionError::CutFailed);
    }
    let rest: Vec<usize> = (0..verts.len()).filter(|i| !cut.contains(i)).collect();
    let max_other = rest
        .iter()
        .map(|&i| verts[i].dot(&w))
        .max()
        .ok_or(ConstructionError::CutFailed)?;
    if max_other >= top {
        return Err(ConstructionError::CutFailed);
    }
    let graph = s.lattice.graph();
    let leaving: Vec<(usize, usize)> = cut
        .iter()
        .flat_map(|&u| graph.neighbors(u).iter().map(move |&x| (u, x)))
        .filter(|(_, x)| !cut.contains(x))
        .collect();
    let mut delta = (&top - &max_other) * half();
    for _ in 0..PLACEMENT_RETRIES {
        let level = &top - &delta;
        if rest.iter().all(|&i| verts[i].dot(&w) < level) {
            let mut pts: Vec<Point> = rest.iter().map(|&i| verts[i].clone()).collect();
            for &(u, x) in &leaving {
                let mu = &delta / (&top - verts[x].dot(&w));
                pts.push(verts[u].lerp(&verts[x], &mu));
            }
            return Ok(VPolytope::new(d, pts)?);
        }
        delta *= half();
    }
    Err(ConstructionError::CutFailed)
}

pub fn op_truncate_simple_vertex(s: &Stage, sel: VertexSelect) -> Result<VPolytope, ConstructionError> {
    let v = match sel {
        VertexSelect::LowestSimple => s
            .lattice
            .simple_vertices()
            .first()
            .copied()
            .ok_or(ConstructionError::NoSimpleVertex)?,
    };
    truncate_face(s, &[v])
}

pub fn op_truncate_simple_edge(s: &Stage, sel: EdgeSelect) -> Result<VPolytope, ConstructionError> {
    let (u, v) = match sel {
        EdgeSelect::First => s
            .lattice
            .simple_edges()
            .first()
            .copied()
            .ok_or(ConstructionError::NoSimpleEdge)?,
    };
    truncate_face(s, &[u, v])
}

/// Affine map sending the facet vertices `fv` to the standard simplex in
/// `x_d = 0` (vertices e_1..e_{d−1} and −Σe_i) and `inner` to `side·e_d`.
fn glue_map(fv: &[Point], inner: &Point, side: i64) -> Result<impl Fn(&Point) -> Point, ConstructionError> {
    let d = inner.dim();
    let mut ed = vec![Rational::zero(); d];
    ed[d - 1] = Rational::from_integer(side.into());
    let ed = Point::new(ed);
    let targets: Vec<Point> = (0..d)
        .map(|i| {
            let mut c = vec![Rational::zero(); d];
            if i + 1 < d {
                c[i] = Rational::one();
            } else {
                c[..d - 1].iter_mut().for_each(|x| *x = -Rational::one());
            }
            Point::new(c)
        })
        .collect();
    // columns u_i = a_i − inner, y_i = target_i − side·e_d; M = Y U⁻¹
    let u: Vec<Vec<Rational>> = (0..d)
        .map(|r| (0..d).map(|i| &fv[i].coords()[r] - &inner.coords()[r]).collect())
        .collect();
    let y: Vec<Vec<Rational>> = (0..d)
        .map(|r| (0..d).map(|i| &targets[i].coords()[r] - &ed.coords()[r]).collect())
        .collect();
    let uinv = inverse(&u).ok_or(ConstructionError::ConnectedSumFailed)?;
    let m: Vec<Vec<Rational>> = (0..d)
        .map(|r| (0..d).map(|c| (0..d).map(|k| &y[r][k] * &uinv[k][c]).sum()).collect())
        .collect();
    let inner = inner.clone();
    Ok(move |x: &Point| {
        let diff = x.sub(&inner);
        Point::new((0..d).map(|r| diff.dot(&m[r]) + &ed.coords()[r]).collect())
    })
}

/// Connected sum along simplex facets. `a` is mapped above the common facet,
/// `b` below it, and `b` is squashed projectively by `x ↦ x / (1 − α x_d)`
/// with α = 2^k until the vertex, edge and facet counts are those of the sum.
/// Vertices of `a` come first, followed by the non-glued vertices of `b`.
pub fn op_connected_sum(
    a: &Stage,
    b: &Stage,
    sel_a: FacetSelect,
    sel_b: FacetSelect,
) -> Result<VPolytope, ConstructionError> {
    let d = a.polytope.dim();
    if b.polytope.dim() != d {
        return Err(ConstructionError::RecipeInvalid(format!(
            "connected sum of a {d}-polytope with a {}-polytope",
            b.polytope.dim()
        )));
    }
    let fa = &a.lattice.facets()[select_facet(&a.lattice, sel_a)?];
    let fb = &b.lattice.facets()[select_facet(&b.lattice, sel_b)?];
    if fa.len() != d || fb.len() != d {
        return Err(ConstructionError::NoSimplexFacet);
    }
    let pa: Vec<Point> = fa.iter().map(|&i| a.polytope.vertices()[i].clone()).collect();
    let pb: Vec<Point> = fb.iter().map(|&i| b.polytope.vertices()[i].clone()).collect();
    let ta = glue_map(&pa, &a.polytope.centroid(), 1)?;
    let tb = glue_map(&pb, &b.polytope.centroid(), -1)?;
    let a_img: Vec<Point> = a.polytope.vertices().iter().map(&ta).collect();
    let b_img: Vec<Point> = (0..b.polytope.nvertices())
        .filter(|i| !fb.contains(i))
        .map(|i| tb(&b.polytope.vertices()[i]))
        .collect();

    let fa_counts = a.lattice.fvector();
    let fb_counts = b.lattice.fvector();
    let want = (
        fa_counts[0] + fb_counts[0] - d,
        fa_counts[1] + fb_counts[1] - d * (d - 1) / 2,
        fa_counts[d - 1] + fb_counts[d - 1] - 2,
    );
    let mut alpha = Rational::one();
    for _ in 0..=SQUASH_STEPS {
        let mut pts = a_img.clone();
        pts.extend(b_img.iter().map(|x| {
            let den = Rational::one() - &alpha * &x.coords()[d - 1];
            x.scale(&den.recip())
        }));
        if let Ok(p) = VPolytope::new(d, pts) {
            if let Ok(l) = crate::lattice::lattice_of(&p) {
                let f = l.fvector();
                if (f[0], f[1], f[d - 1]) == want {
                    return Ok(p);
                }
            }
        }
        alpha *= Rational::from_integer(2.into());
    }
    Err(ConstructionError::ConnectedSumFailed)
}

pub fn op_polar_dual(p: &VPolytope) -> Result<VPolytope, ConstructionError> {
    Ok(polar_dual(p)?)
}

/// Adds a point just beyond the barycenter of the first k-face (canonical
/// order) whose star spans `star_size` vertices, beyond exactly the facets
/// containing that face.
pub fn op_stellar_subdivision(s: &Stage, face_dim: usize, star_size: usize) -> Result<VPolytope, ConstructionError> {
    let d = s.polytope.dim();
    if face_dim == 0 || face_dim >= d - 1 {
        return Err(ConstructionError::NoMatchingFace { face_dim, star_size });
    }
    let face = s
        .lattice
        .faces(face_dim)
        .iter()
        .find(|f| s.lattice.star_vertices(f).len() == star_size)
        .ok_or(ConstructionError::NoMatchingFace { face_dim, star_size })?;
    let verts = s.polytope.vertices();
    let bary = centroid(&face.iter().map(|&i| verts[i].clone()).collect::<Vec<_>>());
    let dir = bary.sub(&s.polytope.centroid());
    let containing = s.lattice.facets_containing(face);
    let mut lambda = Rational::one();
    for _ in 0..PLACEMENT_RETRIES {
        let p = bary.add(&dir.scale(&lambda));
        let ok = s.facets.iter().enumerate().all(|(j, f)| {
            let v = f.plane.eval(&p);
            if containing.contains(&j) {
                v.is_positive()
            } else {
                v.is_negative()
            }
        });
        if ok {
            let mut pts = verts.to_vec();
            pts.push(p);
            return Ok(VPolytope::new(d, pts)?);
        }
        lambda *= half();
    }
    Err(ConstructionError::ApexPlacementFailed)
}
