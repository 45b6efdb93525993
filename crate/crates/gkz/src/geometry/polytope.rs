//! Exact convex-polytope primitives over the rationals.
//!
//! The polytopes here always arise as `conv(P ∪ {0})` for a finite rational
//! point set `P` spanning `R^d`. Faces are enumerated by exhaustive covector
//! solves over point subsets with coplanar merging; volumes come from a fan
//! triangulation of the origin-free boundary. No floating point, no
//! incremental hull.

use num_traits::{One, Signed, Zero};

use crate::exact::{QMatrix, Rat};

/// A geometric point together with every input index that lands on it.
#[derive(Clone, Debug)]
pub(crate) struct UniquePoint {
    pub coord: Vec<Rat>,
    pub members: Vec<usize>,
}

/// Deduplicate coincident points, keeping the member lists sorted.
/// Points at the origin are dropped: they can never lie on an origin-free
/// face, and `conv(P ∪ {0})` contains the origin regardless.
pub(crate) fn unique_points(points: &[Vec<Rat>]) -> Vec<UniquePoint> {
    let mut map: std::collections::BTreeMap<Vec<Rat>, Vec<usize>> = Default::default();
    for (i, p) in points.iter().enumerate() {
        if p.iter().all(|x| x.is_zero()) {
            continue;
        }
        map.entry(p.clone()).or_default().push(i);
    }
    map.into_iter()
        .map(|(coord, members)| UniquePoint { coord, members })
        .collect()
}

/// All k-element subsets of `0..n`, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A facet of `conv(P ∪ {0})` that misses the origin: the set of unique-point
/// indices on it and the covector `c` with `⟨c, p⟩ = 1` on the facet.
pub(crate) struct HullFacet {
    pub on: Vec<usize>,
    pub covector: Vec<Rat>,
}

/// Enumerate the origin-free facets of `conv(P ∪ {0})` where `P` spans `R^d`.
///
/// For every d-subset of distinct points whose coordinate matrix is
/// invertible, solve `⟨c, p_i⟩ = 1`; the subset spans a facet iff every point
/// satisfies `⟨c, p⟩ ≤ 1` (the origin always does). Coplanar points merge
/// into the facet via the equality set.
pub(crate) fn origin_free_facets(pts: &[UniquePoint], dim: usize) -> Vec<HullFacet> {
    let candidates = combinations(pts.len(), dim);
    let solved = crate::par::map_slice(&candidates, |subset| {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&u| pts[u].coord.clone()).collect();
        let m = QMatrix::from_rows(rows);
        let inv = m.inverse().ok()?;
        let ones = vec![Rat::one(); dim];
        let c = inv.matvec(&ones); // solves ⟨c, p_i⟩ = 1 on the subset
        let mut on = Vec::new();
        for (u, p) in pts.iter().enumerate() {
            let val = dot(&c, &p.coord);
            match val.cmp(&Rat::one()) {
                std::cmp::Ordering::Greater => return None,
                std::cmp::Ordering::Equal => on.push(u),
                std::cmp::Ordering::Less => {}
            }
        }
        Some(HullFacet { on, covector: c })
    });
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for facet in solved.into_iter().flatten() {
        if seen.insert(facet.on.clone()) {
            out.push(facet);
        }
    }
    out
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Affine coordinates of a point family inside its own affine hull.
///
/// Returns `(dim, coords)` with `coords[i] ∈ Q^dim`.
fn affine_coords(pts: &[&UniquePoint]) -> (usize, Vec<Vec<Rat>>) {
    let base = &pts[0].coord;
    let vectors: Vec<Vec<Rat>> = pts
        .iter()
        .map(|p| {
            p.coord
                .iter()
                .zip(base)
                .map(|(x, b)| x - b)
                .collect::<Vec<Rat>>()
        })
        .collect();
    // greedy independent basis among the difference vectors
    let ambient = base.len();
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    let mut echelon: Vec<Vec<Rat>> = Vec::new(); // row-reduced copies
    for v in &vectors {
        let mut w = v.clone();
        for row in &echelon {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if !w[lead].is_zero() {
                let factor = &w[lead] / &row[lead];
                for j in 0..ambient {
                    let s = &factor * &row[j];
                    w[j] -= s;
                }
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            echelon.push(w);
            basis.push(v.clone());
        }
    }
    let q = basis.len();
    if q == 0 {
        return (0, vec![Vec::new(); pts.len()]);
    }
    // solve M x = v on q independent pivot rows, check the rest exactly
    let m_cols = basis; // q vectors in Q^ambient
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut rank_rows: Vec<Vec<Rat>> = Vec::new();
    for i in 0..ambient {
        let row: Vec<Rat> = m_cols.iter().map(|col| col[i].clone()).collect();
        let mut w = row.clone();
        for r in &rank_rows {
            let lead = r.iter().position(|x| !x.is_zero()).unwrap();
            if !w[lead].is_zero() {
                let factor = &w[lead] / &r[lead];
                for j in 0..q {
                    let s = &factor * &r[j];
                    w[j] -= s;
                }
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            rank_rows.push(w);
            pivot_rows.push(i);
            if pivot_rows.len() == q {
                break;
            }
        }
    }
    assert_eq!(pivot_rows.len(), q, "basis rank mismatch");
    let square = QMatrix::from_rows(
        pivot_rows
            .iter()
            .map(|&i| m_cols.iter().map(|col| col[i].clone()).collect())
            .collect(),
    );
    let inv = square.inverse().expect("pivot block is invertible");
    let coords: Vec<Vec<Rat>> = vectors
        .iter()
        .map(|v| {
            let rhs: Vec<Rat> = pivot_rows.iter().map(|&i| v[i].clone()).collect();
            let x = inv.matvec(&rhs);
            // consistency on the remaining rows
            for i in 0..ambient {
                let lhs: Rat = (0..q).map(|j| &m_cols[j][i] * &x[j]).sum();
                assert_eq!(lhs, v[i], "point off its own affine hull");
            }
            x
        })
        .collect();
    (q, coords)
}

/// Facets of a polytope given by affine coordinates spanning `Q^q`.
///
/// Returns equality sets (positions into `coords`).
fn facets_in_affine(coords: &[Vec<Rat>], q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for subset in combinations(coords.len(), q) {
        // homogeneous functional (w, w0) vanishing on the subset
        let rows: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&u| {
                let mut r = coords[u].clone();
                r.push(Rat::one());
                r
            })
            .collect();
        let Some(gen) = nullspace_generator(&rows, q + 1) else {
            continue;
        };
        let (w, w0) = (&gen[..q], &gen[q]);
        let evals: Vec<Rat> = coords.iter().map(|x| dot(w, x) + w0).collect();
        let all_le = evals.iter().all(|e| !e.is_positive());
        let all_ge = evals.iter().all(|e| !e.is_negative());
        if !(all_le || all_ge) {
            continue;
        }
        if all_le && all_ge {
            continue; // functional vanishes identically: affinely dependent family
        }
        let on: Vec<usize> = (0..coords.len()).filter(|&u| evals[u].is_zero()).collect();
        if seen.insert(on.clone()) {
            out.push(on);
        }
    }
    out
}

/// One generator of the nullspace of a k×m rational matrix, provided the
/// nullity is exactly one.
fn nullspace_generator(rows: &[Vec<Rat>], m: usize) -> Option<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let k = a.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for c in 0..m {
        if r == k {
            break;
        }
        let Some(p) = (r..k).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for j in 0..m {
            a[r][j] /= &pivot;
        }
        for i in 0..k {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..m {
                    let s = &factor * &a[r][j];
                    a[i][j] -= s;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if m - pivots.len() != 1 {
        return None;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_col = (0..m).find(|c| !pivot_cols.contains(c)).unwrap();
    let mut gen = vec![Rat::zero(); m];
    gen[free_col] = Rat::one();
    for &(pr, pc) in &pivots {
        gen[pc] = -a[pr][free_col].clone();
    }
    Some(gen)
}

/// A face of the input polytope: unique-point positions and affine dimension.
pub(crate) struct SubFace {
    pub on: Vec<usize>,
    pub dim: usize,
}

/// All proper faces of `conv(pts)` (each reported once), any dimension below
/// the polytope's own.
pub(crate) fn proper_faces(pts: &[&UniquePoint]) -> Vec<SubFace> {
    let (q, coords) = affine_coords(pts);
    let mut out: Vec<SubFace> = Vec::new();
    if q == 0 {
        return out;
    }
    for facet in facets_in_affine(&coords, q) {
        let sub: Vec<&UniquePoint> = facet.iter().map(|&u| pts[u]).collect();
        let deeper = proper_faces(&sub);
        out.push(SubFace {
            on: facet.clone(),
            dim: q - 1,
        });
        for f in deeper {
            out.push(SubFace {
                on: f.on.iter().map(|&u| facet[u]).collect(),
                dim: f.dim,
            });
        }
    }
    // dedupe across facets
    let mut seen = std::collections::BTreeSet::new();
    out.retain(|f| {
        let mut key = f.on.clone();
        key.sort_unstable();
        seen.insert(key)
    });
    out
}

/// Fan triangulation of `conv(pts)` from its lexicographically least point
/// (always a vertex). Simplices are lists of unique-point positions,
/// affinely independent, covering the polytope with disjoint interiors.
pub(crate) fn fan_triangulate(pts: &[&UniquePoint]) -> Vec<Vec<usize>> {
    let (q, coords) = affine_coords(pts);
    if q == 0 {
        return vec![vec![0]];
    }
    let apex = (0..pts.len())
        .min_by(|&a, &b| coords[a].cmp(&coords[b]))
        .unwrap();
    let mut out = Vec::new();
    for facet in facets_in_affine(&coords, q) {
        if facet.contains(&apex) {
            continue;
        }
        let sub: Vec<&UniquePoint> = facet.iter().map(|&u| pts[u]).collect();
        for simplex in fan_triangulate(&sub) {
            let mut s: Vec<usize> = simplex.into_iter().map(|u| facet[u]).collect();
            s.push(apex);
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

/// `d! · vol(conv(points ∪ {0}))`, exactly.
///
/// Decomposes the polytope into pyramids with apex `0` over the origin-free
/// facets, triangulates each facet by a recursive fan, and sums simplex
/// determinants.
pub(crate) fn dfact_volume_with_origin(points: &[Vec<Rat>]) -> Rat {
    let dim = match points.first() {
        Some(p) => p.len(),
        None => return Rat::zero(),
    };
    let pts = unique_points(points);
    if pts.is_empty() {
        return Rat::zero();
    }
    // full-dimensionality: the points must span R^d linearly
    let span = QMatrix::from_rows(pts.iter().map(|p| p.coord.clone()).collect());
    if span.rank() < dim {
        return Rat::zero();
    }
    let mut total = Rat::zero();
    for facet in origin_free_facets(&pts, dim) {
        let sub: Vec<&UniquePoint> = facet.on.iter().map(|&u| &pts[u]).collect();
        for simplex in fan_triangulate(&sub) {
            let rows: Vec<Vec<Rat>> = simplex.iter().map(|&u| sub[u].coord.clone()).collect();
            total += qdet(&QMatrix::from_rows(rows)).abs();
        }
    }
    total
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub(crate) fn qdet(m: &QMatrix) -> Rat {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a: Vec<Vec<Rat>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = Rat::one();
    for j in 0..n {
        let Some(p) = (j..n).find(|&i| !a[i][j].is_zero()) else {
            return Rat::zero();
        };
        if p != j {
            a.swap(j, p);
            det = -det;
        }
        let pivot = a[j][j].clone();
        det *= &pivot;
        for i in j + 1..n {
            if !a[i][j].is_zero() {
                let factor = &a[i][j] / &pivot;
                for c in j..n {
                    let s = &factor * &a[j][c];
                    a[i][c] -= s;
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn pt(coords: &[(i64, i64)]) -> Vec<Rat> {
        coords.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn combinations_count_and_order() {
        let c = combinations(5, 3);
        assert_eq!(c.len(), 10);
        assert_eq!(c[0], vec![0, 1, 2]);
        assert_eq!(c[9], vec![2, 3, 4]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn unit_square_volume() {
        let points = vec![
            pt(&[(1, 1), (0, 1)]),
            pt(&[(0, 1), (1, 1)]),
            pt(&[(1, 1), (1, 1)]),
        ];
        assert_eq!(dfact_volume_with_origin(&points), rat_int(2));
    }

    #[test]
    fn triangle_volume_with_interior_point() {
        // conv{0, (0,1), (3,-1)} has area 3/2; (1,0) lies inside
        let points = vec![
            pt(&[(1, 1), (0, 1)]),
            pt(&[(0, 1), (1, 1)]),
            pt(&[(3, 1), (-1, 1)]),
        ];
        assert_eq!(dfact_volume_with_origin(&points), rat_int(3));
    }

    #[test]
    fn degenerate_configurations_have_zero_volume() {
        let points = vec![pt(&[(1, 1), (2, 1)]), pt(&[(2, 1), (4, 1)])];
        assert_eq!(dfact_volume_with_origin(&points), rat_int(0));
        assert_eq!(dfact_volume_with_origin(&[]), rat_int(0));
    }

    #[test]
    fn cube_volume_in_three_dimensions() {
        // unit cube vertices except the origin
        let mut points = Vec::new();
        for x in 0..2i64 {
            for y in 0..2i64 {
                for z in 0..2i64 {
                    if x + y + z > 0 {
                        points.push(pt(&[(x, 1), (y, 1), (z, 1)]));
                    }
                }
            }
        }
        assert_eq!(dfact_volume_with_origin(&points), rat_int(6));
    }

    #[test]
    fn square_face_enumeration_finds_all_origin_free_faces() {
        // square {0, e1, e2, e1+e2}: origin-free faces are the two far edges,
        // the three non-origin vertices
        let points = vec![
            pt(&[(1, 1), (0, 1)]),
            pt(&[(0, 1), (1, 1)]),
            pt(&[(1, 1), (1, 1)]),
        ];
        let pts = unique_points(&points);
        let facets = origin_free_facets(&pts, 2);
        let mut facet_sets: Vec<Vec<usize>> = facets.iter().map(|f| f.on.clone()).collect();
        facet_sets.sort();
        assert_eq!(facet_sets.len(), 2);
        let mut all: std::collections::BTreeSet<Vec<usize>> = Default::default();
        for f in &facets {
            all.insert(f.on.clone());
            let sub: Vec<&UniquePoint> = f.on.iter().map(|&u| &pts[u]).collect();
            for sf in proper_faces(&sub) {
                all.insert(sf.on.iter().map(|&u| f.on[u]).collect());
            }
        }
        // 2 edges + 3 vertices
        assert_eq!(all.len(), 5);
    }
}
