//! Face-count transition laws. Vectors here are "extended": index 0 is the
//! empty face, index k + 1 counts k-faces and the last entry is the polytope itself.

use num_integer::binomial;

pub(crate) type Ext = Vec<usize>;

pub(crate) fn proper(ext: &[usize]) -> Vec<usize> {
    ext[1..ext.len() - 1].to_vec()
}

pub(crate) fn extend(fvector: &[usize]) -> Ext {
    let mut e = vec![1];
    e.extend_from_slice(fvector);
    e.push(1);
    e
}

pub(crate) fn simplex_ext(d: usize) -> Ext {
    (0..=d + 1).map(|k| binomial(d + 1, k)).collect()
}

/// Faces of a join are joins of faces, the empty face included.
pub(crate) fn join_ext(a: &[usize], b: &[usize]) -> Ext {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Faces of a product are products of nonempty faces.
pub(crate) fn product_ext(a: &[usize], b: &[usize]) -> Ext {
    let (a, b) = (&a[1..], &b[1..]);
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    let mut e = vec![1];
    e.extend(out);
    e
}

/// f-vector of the cyclic polytope C(n, d) via its h-vector.
pub(crate) fn cyclic_fvector(n: usize, d: usize) -> Vec<usize> {
    let h: Vec<usize> = (0..=d)
        .map(|i| {
            let i = i.min(d - i);
            binomial(n - d - 1 + i, i)
        })
        .collect();
    (1..=d)
        .map(|j| (0..=j).map(|i| binomial(d - i, j - i) * h[i]).sum())
        .collect()
}

pub(crate) fn pyramid(f: &[usize]) -> Vec<usize> {
    proper(&join_ext(&[1, 1], &extend(f)))
}

/// Stacking onto a simplex facet.
pub(crate) fn stack(f: &[usize]) -> Vec<usize> {
    let d = f.len();
    let mut g = f.to_vec();
    for (k, x) in g.iter_mut().enumerate().take(d - 1) {
        *x += binomial(d, k);
    }
    g[d - 1] += d - 1;
    g
}

pub(crate) fn truncate_vertex(f: &[usize]) -> Vec<usize> {
    let d = f.len();
    let mut g = f.to_vec();
    g[0] += d - 1;
    for (k, x) in g.iter_mut().enumerate().take(d - 1).skip(1) {
        *x += binomial(d, k + 1);
    }
    g[d - 1] += 1;
    g
}

/// Truncating a simple edge adds a prism Δ_1 × Δ_{d−2} facet and removes the
/// edge and its two endpoints.
pub(crate) fn truncate_edge(f: &[usize]) -> Vec<usize> {
    let d = f.len();
    let mut g = f.to_vec();
    g[0] += 2 * d - 4;
    g[1] += (d - 1) * (d - 1) - 1;
    for (k, x) in g.iter_mut().enumerate().take(d - 1).skip(2) {
        *x += 2 * binomial(d - 1, k + 1) + binomial(d - 1, k);
    }
    g[d - 1] += 1;
    g
}

/// Gluing along a simplex facet: the shared boundary is counted once and the
/// two glued facets disappear.
pub(crate) fn connected_sum(a: &[usize], b: &[usize]) -> Vec<usize> {
    let d = a.len();
    let mut g: Vec<usize> = (0..d - 1).map(|k| a[k] + b[k] - binomial(d, k + 1)).collect();
    g.push(a[d - 1] + b[d - 1] - 2);
    g
}

pub(crate) fn dual(f: &[usize]) -> Vec<usize> {
    f.iter().rev().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler(f: &[usize]) -> bool {
        let alt: i64 = f
            .iter()
            .enumerate()
            .map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum();
        alt == if f.len() % 2 == 0 { 0 } else { 2 }
    }

    #[test]
    fn seeds() {
        assert_eq!(proper(&simplex_ext(6)), vec![7, 21, 35, 35, 21, 7]);
        assert_eq!(cyclic_fvector(7, 6), vec![7, 21, 35, 35, 21, 7]);
        assert_eq!(cyclic_fvector(8, 6)[5], 16);
        assert_eq!(cyclic_fvector(9, 3), vec![9, 21, 14]);
        let prism = product_ext(&simplex_ext(1), &simplex_ext(5));
        assert_eq!(proper(&prism)[..2], [12, 36]);
        let square = product_ext(&simplex_ext(1), &simplex_ext(1));
        let p1 = proper(&join_ext(&square, &simplex_ext(3)));
        assert_eq!((p1[5], p1[4]), (8, 26));
    }

    #[test]
    fn laws_preserve_euler() {
        let base = cyclic_fvector(9, 6);
        for f in [
            pyramid(&cyclic_fvector(9, 5)),
            stack(&base),
            truncate_vertex(&base),
            truncate_edge(&base),
            connected_sum(&base, &cyclic_fvector(8, 6)),
            dual(&base),
        ] {
            assert!(euler(&f), "{f:?}");
        }
    }

    #[test]
    fn pair_increments() {
        let s6 = proper(&simplex_ext(6));
        assert_eq!(stack(&s6)[..2], [8, 27]);
        assert_eq!(truncate_vertex(&stack(&s6))[..2], [13, 42]);
        let d33 = proper(&product_ext(&simplex_ext(3), &simplex_ext(3)));
        assert_eq!(truncate_edge(&d33)[..2], [24, 72]);
    }
}
