//! Exact polyhedral geometry: weighted umbrellas, their breakpoints in a
//! one-parameter weight pattern, regular triangulations with weight cones,
//! normalized volumes, and the convergence-domain description attached to a
//! simplex.
//!
//! The umbrella of `A` at weight `s` is the set of faces of
//! `conv({a_i/s_i} ∪ {0})` that miss the origin. Its facets at weight `ω`
//! coincide with the maximal cells of the regular subdivision `T_ω`, which is
//! what ties this module to the triangulation machinery below.

pub(crate) mod feasibility;
pub(crate) mod polytope;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};

use crate::exact::{self, format_rat, Int, IntMatrix, QMatrix, Rat};
use crate::{Error, Result};

use polytope::combinations;

/// A positive weight per column of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    values: Vec<Rat>,
}

impl WeightVector {
    pub fn explicit(values: Vec<Rat>) -> Result<Self> {
        if values.iter().any(|v| !v.is_positive()) {
            return Err(Error::InvalidInput {
                field: "weight".into(),
                reason: "all weights must be positive".into(),
            });
        }
        Ok(WeightVector { values })
    }

    /// Pattern form: weight 1 on `tau`, weight `s` elsewhere.
    pub fn pattern(n: usize, tau: &[usize], s: &Rat) -> Result<Self> {
        if !s.is_positive() {
            return Err(Error::InvalidInput {
                field: "s".into(),
                reason: "pattern weight must be positive".into(),
            });
        }
        let values = (0..n)
            .map(|i| {
                if tau.contains(&i) {
                    Rat::one()
                } else {
                    s.clone()
                }
            })
            .collect();
        Ok(WeightVector { values })
    }

    pub fn ones(n: usize) -> Self {
        WeightVector {
            values: vec![Rat::one(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }
}

/// A face of the umbrella: the columns on it, its dimension, and the
/// covector `c` of a facet containing it (`⟨c, a_i/s_i⟩ = 1` on that facet).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub indices: Vec<usize>,
    pub dim: usize,
    pub covector: Vec<Rat>,
}

/// The weighted umbrella: all origin-free faces, grouped by dimension.
#[derive(Clone, Debug)]
pub struct Umbrella {
    pub weight: WeightVector,
    pub faces: Vec<Face>,
}

impl Umbrella {
    /// Faces of dimension `q`, in lexicographic index order.
    pub fn faces_of_dim(&self, q: usize) -> Vec<&Face> {
        self.faces.iter().filter(|f| f.dim == q).collect()
    }

    /// The facets (dimension d−1 faces).
    pub fn facets(&self, d: usize) -> Vec<&Face> {
        self.faces_of_dim(d - 1)
    }

    pub fn facet_sets(&self, d: usize) -> Vec<Vec<usize>> {
        self.facets(d).iter().map(|f| f.indices.clone()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "weight": self.weight.values().iter().map(format_rat).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(|f| serde_json::json!({
                "indices": f.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "dim": f.dim,
                "covector": f.covector.iter().map(format_rat).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn scaled_points(a: &IntMatrix, weight: &WeightVector) -> Vec<Vec<Rat>> {
    (0..a.cols())
        .map(|j| {
            a.col(j)
                .iter()
                .map(|x| Rat::from_integer(x.clone()) / &weight.values()[j])
                .collect()
        })
        .collect()
}

fn check_full_rank(a: &IntMatrix) -> Result<()> {
    let rank = a.rank();
    if rank < a.rows() {
        return Err(Error::NotFullRank {
            rank,
            expected: a.rows(),
        });
    }
    Ok(())
}

/// The `(A, s)`-umbrella: every face of `conv({a_i/s_i} ∪ {0})` that misses
/// the origin, with supporting covectors, in deterministic order.
pub fn umbrella(a: &IntMatrix, weight: &WeightVector) -> Result<Umbrella> {
    check_full_rank(a)?;
    if weight.len() != a.cols() {
        return Err(Error::InvalidInput {
            field: "weight".into(),
            reason: format!("expected {} weights, got {}", a.cols(), weight.len()),
        });
    }
    let d = a.rows();
    let points = scaled_points(a, weight);
    let pts = polytope::unique_points(&points);
    let mut facets = polytope::origin_free_facets(&pts, d);
    facets.sort_by(|x, y| x.on.cmp(&y.on));

    let expand = |unique_ids: &[usize]| -> Vec<usize> {
        let mut v: Vec<usize> = unique_ids
            .iter()
            .flat_map(|&u| pts[u].members.iter().copied())
            .collect();
        v.sort_unstable();
        v
    };

    let mut seen: std::collections::BTreeMap<Vec<usize>, Face> = Default::default();
    for facet in &facets {
        let indices = expand(&facet.on);
        seen.entry(indices.clone()).or_insert(Face {
            indices,
            dim: d - 1,
            covector: facet.covector.clone(),
        });
        let sub: Vec<&polytope::UniquePoint> = facet.on.iter().map(|&u| &pts[u]).collect();
        for sf in polytope::proper_faces(&sub) {
            let ids: Vec<usize> = sf.on.iter().map(|&u| facet.on[u]).collect();
            let indices = expand(&ids);
            seen.entry(indices.clone()).or_insert(Face {
                indices,
                dim: sf.dim,
                covector: facet.covector.clone(),
            });
        }
    }
    let mut faces: Vec<Face> = seen.into_values().collect();
    faces.sort_by(|x, y| (x.dim, &x.indices).cmp(&(y.dim, &y.indices)));
    Ok(Umbrella {
        weight: weight.clone(),
        faces,
    })
}

/// Facet index sets only (no subface recursion); the umbrella is determined
/// by these, which is all the breakpoint scan needs.
fn facet_index_sets(
    a: &IntMatrix,
    weight: &WeightVector,
) -> std::collections::BTreeSet<Vec<usize>> {
    let d = a.rows();
    let points = scaled_points(a, weight);
    let pts = polytope::unique_points(&points);
    polytope::origin_free_facets(&pts, d)
        .into_iter()
        .map(|f| {
            let mut v: Vec<usize> =
                f.on.iter()
                    .flat_map(|&u| pts[u].members.iter().copied())
                    .collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// All `s_0 > 0` where the pattern umbrella (weight 1 on `tau`, `s` outside)
/// changes its facet set.
///
/// Candidates are the positive roots of the affine incidence functions
/// `s ↦ ⟨c_σ(s), a_j⟩ − s_j(s)` over all covector solves; the candidate list
/// may be over-complete because each candidate is confirmed by exact
/// umbrella comparison at rational sample points on both sides.
pub fn umbrella_breakpoints(a: &IntMatrix, tau: &[usize]) -> Result<Vec<Rat>> {
    check_full_rank(a)?;
    let d = a.rows();
    let n = a.cols();
    let in_tau = |j: usize| tau.contains(&j);

    let mut candidates: std::collections::BTreeSet<Rat> = Default::default();
    for sigma in combinations(n, d) {
        let a_sig = a.submatrix_cols(&sigma);
        if a_sig.det().is_zero() {
            continue;
        }
        let inv_t = a_sig.transpose().to_q().inverse().expect("invertible");
        let rhs0: Vec<Rat> = sigma
            .iter()
            .map(|&i| if in_tau(i) { Rat::one() } else { Rat::zero() })
            .collect();
        let rhs1: Vec<Rat> = sigma
            .iter()
            .map(|&i| if in_tau(i) { Rat::zero() } else { Rat::one() })
            .collect();
        let c0 = inv_t.matvec(&rhs0);
        let c1 = inv_t.matvec(&rhs1);
        for j in 0..n {
            if sigma.contains(&j) {
                continue;
            }
            let col: Vec<Rat> = a
                .col(j)
                .iter()
                .map(|x| Rat::from_integer(x.clone()))
                .collect();
            let dot = |c: &[Rat]| -> Rat { c.iter().zip(&col).map(|(x, y)| x * y).sum() };
            let alpha = dot(&c0) - if in_tau(j) { Rat::one() } else { Rat::zero() };
            let beta = dot(&c1) - if in_tau(j) { Rat::zero() } else { Rat::one() };
            if !beta.is_zero() {
                let root = -alpha / beta;
                if root.is_positive() {
                    candidates.insert(root);
                }
            }
        }
    }

    let candidates: Vec<Rat> = candidates.into_iter().collect();
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    // sample points strictly between consecutive candidates, plus sentinels
    let mut samples: Vec<Rat> = Vec::with_capacity(candidates.len() + 1);
    samples.push(&candidates[0] / Rat::from_integer(Int::from(2)));
    for w in candidates.windows(2) {
        samples.push((&w[0] + &w[1]) / Rat::from_integer(Int::from(2)));
    }
    samples.push(candidates.last().unwrap() + Rat::one());

    let mut eval_points: Vec<Rat> = Vec::new();
    eval_points.extend(samples.iter().cloned());
    eval_points.extend(candidates.iter().cloned());
    let facet_sets_at = crate::par::map_slice(&eval_points, |s| {
        let w = WeightVector::pattern(n, tau, s).expect("positive sample");
        facet_index_sets(a, &w)
    });
    let (sample_sets, candidate_sets) = facet_sets_at.split_at(samples.len());

    let mut breakpoints = Vec::new();
    for (i, cand) in candidates.iter().enumerate() {
        let left = &sample_sets[i];
        let right = &sample_sets[i + 1];
        let here = &candidate_sets[i];
        if left != here || here != right {
            breakpoints.push(cand.clone());
        }
    }
    Ok(breakpoints)
}

/// A regular triangulation `T_ω` restricted to its maximal cells.
#[derive(Clone, Debug)]
pub struct Triangulation {
    /// The columns triangulated (0-based, sorted).
    pub columns: Vec<usize>,
    /// The weight, one entry per element of `columns`.
    pub weight: Vec<Rat>,
    /// Maximal simplices as sorted original column index sets.
    pub maximal_simplices: Vec<Vec<usize>>,
    /// Whether the weight was certified generic: every maximal cell of the
    /// regular subdivision is a simplex, hence the cells form a genuine
    /// triangulation of `pos(A)`.
    pub certified_generic: bool,
}

impl Triangulation {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "columns": self.columns.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "weight": self.weight.iter().map(format_rat).collect::<Vec<_>>(),
            "maximal_simplices": self.maximal_simplices.iter()
                .map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "certified_generic": self.certified_generic,
        })
    }
}

/// The regular subdivision `T_ω` of all columns of `A`.
///
/// A d-subset `σ` is a maximal simplex iff `ω·B_σ > 0` componentwise. If some
/// candidate has `ω·B_σ ≥ 0` with a zero component, `ω` lies on a cone
/// boundary: the subdivision has a non-simplicial cell through `σ` and the
/// call fails with a structured error naming it.
pub fn regular_triangulation(a: &IntMatrix, omega: &[Rat]) -> Result<Triangulation> {
    check_full_rank(a)?;
    let d = a.rows();
    let n = a.cols();
    if omega.len() != n {
        return Err(Error::InvalidInput {
            field: "omega".into(),
            reason: format!("expected {} weights, got {}", n, omega.len()),
        });
    }
    let subsets = combinations(n, d);
    let verdicts = crate::par::map_slice(&subsets, |sigma| {
        let a_sig = a.submatrix_cols(sigma);
        if a_sig.det().is_zero() {
            return Ok(None);
        }
        let inv_t = a_sig.transpose().to_q().inverse().expect("invertible");
        let rhs: Vec<Rat> = sigma.iter().map(|&i| omega[i].clone()).collect();
        let c = inv_t.matvec(&rhs);
        let mut boundary = false;
        for j in 0..n {
            if sigma.contains(&j) {
                continue;
            }
            let val: Rat = c
                .iter()
                .zip(a.col(j).iter())
                .map(|(x, y)| x * Rat::from_integer(y.clone()))
                .sum();
            let gap = &omega[j] - val;
            if gap.is_negative() {
                return Ok(None);
            }
            if gap.is_zero() {
                boundary = true;
            }
        }
        if boundary {
            Err(Error::NonGenericWeight {
                simplex: sigma.iter().map(|&i| i + 1).collect(),
            })
        } else {
            Ok(Some(sigma.clone()))
        }
    });
    let mut simplices = Vec::new();
    for v in verdicts {
        if let Some(sigma) = v? {
            simplices.push(sigma);
        }
    }
    assert!(
        !simplices.is_empty(),
        "a full-rank configuration always has at least one maximal cell"
    );
    Ok(Triangulation {
        columns: (0..n).collect(),
        weight: omega.to_vec(),
        maximal_simplices: simplices,
        certified_generic: true,
    })
}

/// `d! · vol(conv({a_i : i ∈ cols} ∪ {0}))` with respect to `Z^d`.
pub(crate) fn vol_zd(a: &IntMatrix, cols: &[usize]) -> Rat {
    let points: Vec<Vec<Rat>> = cols
        .iter()
        .map(|&j| {
            a.col(j)
                .iter()
                .map(|x| Rat::from_integer(x.clone()))
                .collect()
        })
        .collect();
    polytope::dfact_volume_with_origin(&points)
}

const VOLUME_RETRY_ATTEMPTS: usize = 48;

/// A regular triangulation `T(τ)` of `A_τ` whose (d−1)-simplices satisfy
/// `Σ vol_{ZA}(Δ_σ) = vol_{ZA}(Δ_τ)` exactly.
///
/// Deterministic retry: the all-ones weight first, then seeded rational
/// perturbations of shrinking magnitude `1/2^t`. Every accepted weight is
/// certified generic and passes the exact volume identity.
pub fn volume_respecting_triangulation(
    a: &IntMatrix,
    tau: &[usize],
    seed: u64,
) -> Result<Triangulation> {
    check_full_rank(a)?;
    let d = a.rows();
    let mut cols: Vec<usize> = tau.to_vec();
    cols.sort_unstable();
    cols.dedup();
    let a_tau = a.submatrix_cols(&cols);
    if a_tau.rank() < d {
        return Ok(Triangulation {
            columns: cols.clone(),
            weight: vec![Rat::one(); cols.len()],
            maximal_simplices: Vec::new(),
            certified_generic: true,
        });
    }
    let index = exact::lattice_index_full(a)?;
    let target = vol_zd(a, &cols) / Rat::from_integer(index.clone());
    assert!(target.is_integer(), "ZA-normalized volume must be integral");

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let base_denom: i64 = 1 << 16;
    for attempt in 0..=VOLUME_RETRY_ATTEMPTS {
        let omega: Vec<Rat> = if attempt == 0 {
            vec![Rat::one(); cols.len()]
        } else {
            let denom = Int::from(base_denom) * (Int::one() << attempt.min(40));
            (0..cols.len())
                .map(|_| {
                    let r: i64 = rng.gen_range(1..base_denom);
                    Rat::one() + Rat::new(Int::from(r), denom.clone())
                })
                .collect()
        };
        let local = match regular_triangulation(&a_tau, &omega) {
            Ok(t) => t,
            Err(Error::NonGenericWeight { .. }) => continue,
            Err(e) => return Err(e),
        };
        let total: Rat = local
            .maximal_simplices
            .iter()
            .map(|sigma| {
                let orig: Vec<usize> = sigma.iter().map(|&i| cols[i]).collect();
                Rat::from_integer(a.submatrix_cols(&orig).det().abs())
                    / Rat::from_integer(index.clone())
            })
            .sum();
        if total == target {
            let mut simplices: Vec<Vec<usize>> = local
                .maximal_simplices
                .iter()
                .map(|sigma| sigma.iter().map(|&i| cols[i]).collect())
                .collect();
            simplices.sort();
            return Ok(Triangulation {
                columns: cols,
                weight: omega,
                maximal_simplices: simplices,
                certified_generic: true,
            });
        }
    }
    Err(Error::RetryExhausted {
        attempts: VOLUME_RETRY_ATTEMPTS + 1,
        details: format!(
            "no certified weight matched vol_ZA = {} for columns {:?}",
            target,
            cols.iter().map(|&i| i + 1).collect::<Vec<_>>()
        ),
    })
}

/// `vol_{ZA}(Δ_τ)`: zero when `rank(A_τ) < d`, `|det A_σ| / [Z^d : ZA]` for a
/// simplex, and otherwise the exact sum over a volume-respecting
/// triangulation. Always a nonnegative integer (asserted).
pub fn normalized_volume(a: &IntMatrix, tau: &[usize]) -> Result<Rat> {
    check_full_rank(a)?;
    let d = a.rows();
    let mut cols: Vec<usize> = tau.to_vec();
    cols.sort_unstable();
    cols.dedup();
    if a.submatrix_cols(&cols).rank() < d {
        return Ok(Rat::zero());
    }
    let index = exact::lattice_index_full(a)?;
    let vol = if cols.len() == d {
        Rat::from_integer(a.submatrix_cols(&cols).det().abs()) / Rat::from_integer(index)
    } else {
        let t = volume_respecting_triangulation(a, &cols, 0)?;
        t.maximal_simplices
            .iter()
            .map(|sigma| {
                Rat::from_integer(a.submatrix_cols(sigma).det().abs())
                    / Rat::from_integer(index.clone())
            })
            .sum()
    };
    assert!(vol.is_integer(), "ZA-normalized volume must be integral");
    Ok(vol)
}

/// Which side of the simplex hyperplane `H_σ` a column sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperplaneSide {
    /// `|A_σ^{-1} a_j| < 1`: the open half-space containing the origin.
    Below,
    /// `|A_σ^{-1} a_j| = 1`.
    On,
    /// `|A_σ^{-1} a_j| > 1`.
    Above,
}

/// The symbolic convergence region `U_σ` of the series attached to `σ`.
#[derive(Clone, Debug)]
pub struct ConvergenceDomain {
    /// `σ` itself (0-based, sorted).
    pub sigma: Vec<usize>,
    /// Coordinates that must not vanish: `x_i ≠ 0` for `i ∈ σ`.
    pub nonvanishing: Vec<usize>,
    /// One constraint `|x_j| < R · |x_σ^{A_σ^{-1} a_j}|` per column on
    /// `H_σ ∖ σ`, with the monomial exponents listed per σ-column.
    pub bounded: Vec<(usize, Vec<(usize, Rat)>)>,
    /// Classification of every column outside σ against `H_σ`.
    pub classification: Vec<(usize, HyperplaneSide)>,
}

impl ConvergenceDomain {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sigma": self.sigma.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "nonvanishing": self.nonvanishing.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "bounded": self.bounded.iter().map(|(j, exps)| serde_json::json!({
                "column": j + 1,
                "exponents": exps.iter()
                    .map(|(i, e)| ((i + 1).to_string(), format_rat(e)))
                    .collect::<std::collections::BTreeMap<_, _>>(),
            })).collect::<Vec<_>>(),
            "classification": self.classification.iter().map(|(j, side)| serde_json::json!({
                "column": j + 1,
                "side": match side {
                    HyperplaneSide::Below => "below",
                    HyperplaneSide::On => "on",
                    HyperplaneSide::Above => "above",
                },
            })).collect::<Vec<_>>(),
        })
    }
}

/// Describe `U_σ`: `x_i ≠ 0` on σ plus one bound per column on `H_σ ∖ σ`,
/// with the side classification of every other column.
pub fn convergence_domain(a: &IntMatrix, sigma: &[usize]) -> Result<ConvergenceDomain> {
    check_full_rank(a)?;
    let mut sig: Vec<usize> = sigma.to_vec();
    sig.sort_unstable();
    sig.dedup();
    let a_sig = a.submatrix_cols(&sig);
    if sig.len() != a.rows() || a_sig.det().is_zero() {
        return Err(Error::NotASimplex {
            columns: sigma.iter().map(|&i| i + 1).collect(),
        });
    }
    let inv = a_sig.to_q().inverse()?;
    let mut bounded = Vec::new();
    let mut classification = Vec::new();
    for j in 0..a.cols() {
        if sig.contains(&j) {
            continue;
        }
        let col: Vec<Rat> = a
            .col(j)
            .iter()
            .map(|x| Rat::from_integer(x.clone()))
            .collect();
        let expo = inv.matvec(&col);
        let total = exact::coord_sum(&expo);
        let side = match total.cmp(&Rat::one()) {
            std::cmp::Ordering::Less => HyperplaneSide::Below,
            std::cmp::Ordering::Equal => HyperplaneSide::On,
            std::cmp::Ordering::Greater => HyperplaneSide::Above,
        };
        if side == HyperplaneSide::On {
            bounded.push((j, sig.iter().cloned().zip(expo.iter().cloned()).collect()));
        }
        classification.push((j, side));
    }
    Ok(ConvergenceDomain {
        sigma: sig.clone(),
        nonvanishing: sig,
        bounded,
        classification,
    })
}

/// Whether the columns of `A` lie in a single open linear half-space.
pub fn is_pointed(a: &IntMatrix) -> bool {
    use feasibility::LinearConstraint;
    let d = a.rows();
    let constraints: Vec<LinearConstraint> = (0..a.cols())
        .map(|j| {
            let coeffs: Vec<Rat> = a
                .col(j)
                .iter()
                .map(|x| Rat::from_integer(-x.clone()))
                .collect();
            LinearConstraint::lt(coeffs, Rat::zero())
        })
        .collect();
    feasibility::feasible(&constraints, d)
}

/// `A_σ^{-1}·a_j` as a rational vector.
pub(crate) fn scaled_column(inv: &QMatrix, a: &IntMatrix, j: usize) -> Vec<Rat> {
    let col: Vec<Rat> = a
        .col(j)
        .iter()
        .map(|x| Rat::from_integer(x.clone()))
        .collect();
    inv.matvec(&col)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn ejem1() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 0, 3], vec![0, 2, 1]])
    }

    fn nonpointed() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 0, -3, 2], vec![-1, 1, -2, 2]])
    }

    fn gap2x3() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 0, 3], vec![0, 1, -1]])
    }

    #[test]
    fn umbrella_facets_of_ejem1_at_ones() {
        let u = umbrella(&ejem1(), &WeightVector::ones(3)).unwrap();
        assert_eq!(u.facet_sets(2), vec![vec![0, 2], vec![1, 2]]);
        let verts: Vec<Vec<usize>> = u
            .faces_of_dim(0)
            .iter()
            .map(|f| f.indices.clone())
            .collect();
        assert_eq!(verts, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn umbrella_merges_coplanar_column_at_the_jump_weight() {
        let w = WeightVector::explicit(vec![rat_int(1), rat_int(1), rat(7, 2)]).unwrap();
        let u = umbrella(&ejem1(), &w).unwrap();
        assert_eq!(u.facet_sets(2), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn umbrella_of_identity_is_the_unit_simplex_facet() {
        let a = IntMatrix::identity(3);
        let u = umbrella(&a, &WeightVector::ones(3)).unwrap();
        assert_eq!(u.facet_sets(3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn umbrella_covectors_support_their_facets() {
        let a = nonpointed();
        let u = umbrella(&a, &WeightVector::ones(4)).unwrap();
        for f in u.facets(2) {
            for &i in &f.indices {
                let val: Rat = f
                    .covector
                    .iter()
                    .zip(a.col(i).iter())
                    .map(|(c, x)| c * Rat::from_integer(x.clone()))
                    .sum();
                assert_eq!(val, Rat::one());
            }
        }
    }

    #[test]
    fn breakpoints_of_ejem1_along_the_hyperplane_pattern() {
        let bps = umbrella_breakpoints(&ejem1(), &[0, 1]).unwrap();
        assert_eq!(bps, vec![rat(7, 2)]);
    }

    #[test]
    fn breakpoints_of_the_codim_two_pattern() {
        let bps = umbrella_breakpoints(&gap2x3(), &[0]).unwrap();
        assert_eq!(bps, vec![rat(3, 2)]);
    }

    #[test]
    fn identity_pattern_has_no_breakpoints_above_one() {
        let a = IntMatrix::identity(3);
        for tau in [vec![0usize], vec![0, 1]] {
            let bps = umbrella_breakpoints(&a, &tau).unwrap();
            assert!(bps.iter().all(|b| *b <= Rat::one()));
        }
    }

    #[test]
    fn breakpoint_soundness_between_samples() {
        // umbrellas at two rational points inside the same gap agree exactly
        let a = ejem1();
        let tau = vec![0usize, 1];
        let bps = umbrella_breakpoints(&a, &tau).unwrap();
        assert_eq!(bps.len(), 1);
        for (lo, hi) in [(rat(1, 2), rat(3, 1)), (rat(4, 1), rat(100, 1))] {
            let wl = WeightVector::pattern(3, &tau, &lo).unwrap();
            let wh = WeightVector::pattern(3, &tau, &hi).unwrap();
            assert_eq!(
                umbrella(&a, &wl).unwrap().facet_sets(2),
                umbrella(&a, &wh).unwrap().facet_sets(2)
            );
        }
    }

    #[test]
    fn triangulation_of_ejem1_at_ones() {
        let t = regular_triangulation(&ejem1(), &[rat_int(1), rat_int(1), rat_int(1)]).unwrap();
        assert_eq!(t.maximal_simplices, vec![vec![0, 2], vec![1, 2]]);
        assert!(t.certified_generic);
    }

    #[test]
    fn triangulation_of_identity() {
        let a = IntMatrix::identity(3);
        let t = regular_triangulation(&a, &vec![rat_int(1); 3]).unwrap();
        assert_eq!(t.maximal_simplices, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn triangulation_rejects_boundary_weight() {
        // weight (1,1,7/2) puts all three scaled columns on one hyperplane
        let err = regular_triangulation(&ejem1(), &[rat_int(1), rat_int(1), rat(7, 2)]);
        assert!(matches!(err, Err(Error::NonGenericWeight { .. })));
    }

    #[test]
    fn umbrella_equals_triangulation_on_the_nonpointed_example() {
        let a = nonpointed();
        let w = WeightVector::ones(4);
        let u = umbrella(&a, &w).unwrap();
        let t = regular_triangulation(&a, w.values()).unwrap();
        assert_eq!(u.facet_sets(2), t.maximal_simplices);
    }

    #[test]
    fn volume_respecting_triangulation_of_ejem1() {
        let t = volume_respecting_triangulation(&ejem1(), &[0, 1, 2], 0).unwrap();
        assert_eq!(t.maximal_simplices, vec![vec![0, 2], vec![1, 2]]);
        let vol = normalized_volume(&ejem1(), &[0, 1, 2]).unwrap();
        assert_eq!(vol, rat_int(7));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(normalized_volume(&ejem1(), &[0, 1]).unwrap(), rat_int(2));
        assert_eq!(normalized_volume(&ejem1(), &[0]).unwrap(), rat_int(0));
        let t = volume_respecting_triangulation(&ejem1(), &[0, 1], 0).unwrap();
        assert_eq!(t.maximal_simplices, vec![vec![0, 1]]);
    }

    #[test]
    fn rank_deficient_tau_is_vacuous() {
        let t = volume_respecting_triangulation(&ejem1(), &[0], 7).unwrap();
        assert!(t.maximal_simplices.is_empty());
        assert!(t.certified_generic);
    }

    #[test]
    fn convergence_domain_examples() {
        let dom = convergence_domain(&ejem1(), &[0, 1]).unwrap();
        assert_eq!(dom.nonvanishing, vec![0, 1]);
        assert!(dom.bounded.is_empty());
        assert_eq!(dom.classification, vec![(2, HyperplaneSide::Above)]);

        let a = IntMatrix::identity(2);
        let dom = convergence_domain(&a, &[0, 1]).unwrap();
        assert!(dom.bounded.is_empty());
        assert!(dom.classification.is_empty());

        // a_3 = 2a_1 - a_2 lies on H_sigma
        let a = IntMatrix::from_rows(&[vec![1, 0, 2], vec![0, 1, -1]]);
        let dom = convergence_domain(&a, &[0, 1]).unwrap();
        assert_eq!(dom.classification, vec![(2, HyperplaneSide::On)]);
        assert_eq!(dom.bounded.len(), 1);
        let (col, exps) = &dom.bounded[0];
        assert_eq!(*col, 2);
        assert_eq!(exps[0], (0, rat_int(2)));
        assert_eq!(exps[1], (1, rat_int(-1)));
    }

    #[test]
    fn pointedness() {
        assert!(is_pointed(&ejem1()));
        assert!(is_pointed(&gap2x3()));
        assert!(!is_pointed(&nonpointed()));
        assert!(is_pointed(&IntMatrix::identity(3)));
    }

    #[test]
    fn facet_cones_cover_every_column_ray() {
        use feasibility::LinearConstraint;
        for a in [ejem1(), nonpointed(), gap2x3()] {
            let u = umbrella(&a, &WeightVector::ones(a.cols())).unwrap();
            let facets = u.facet_sets(a.rows());
            for j in 0..a.cols() {
                let target: Vec<Rat> = a
                    .col(j)
                    .iter()
                    .map(|x| Rat::from_integer(x.clone()))
                    .collect();
                let covered = facets.iter().any(|f| {
                    // feasibility of lambda >= 0 with sum_i lambda_i a_i = target
                    let m = f.len();
                    let mut cons: Vec<LinearConstraint> = Vec::new();
                    for row in 0..a.rows() {
                        let coeffs: Vec<Rat> = f
                            .iter()
                            .map(|&i| Rat::from_integer(a[(row, i)].clone()))
                            .collect();
                        cons.push(LinearConstraint::le(coeffs.clone(), target[row].clone()));
                        cons.push(LinearConstraint::ge(coeffs, target[row].clone()));
                    }
                    for i in 0..m {
                        let mut coeffs = vec![Rat::zero(); m];
                        coeffs[i] = rat_int(1);
                        cons.push(LinearConstraint::ge(coeffs, Rat::zero()));
                    }
                    feasibility::feasible(&cons, m)
                });
                assert!(covered, "column {j} not covered by facet cones");
            }
        }
    }
}
