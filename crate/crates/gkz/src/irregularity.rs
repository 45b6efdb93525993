//! Dimension formulas: lower bounds for Gevrey solution spaces from
//! volume-respecting triangulations, the two face multiplicities of the
//! weighted characteristic cycle that the hyperplane theory needs, and the
//! irregularity dimension along coordinate hyperplanes as a difference of
//! facet volume sums.
//!
//! The multiplicity formulas require a pointed configuration with
//! `ZA = Z^d` and a non-rank-jumping parameter; pointedness and the lattice
//! condition are checked, the parameter condition is assumed and reported as
//! a caveat. Weighted sums at `s + ε` are evaluated exactly at the midpoint
//! between `s` and the next umbrella breakpoint, never with a numeric
//! epsilon.

use num_traits::{One, Signed, Zero};

use crate::exact::{self, format_rat, IntMatrix, Rat};
use crate::geometry::{self, Triangulation, WeightVector};
use crate::series;
use crate::{Error, Result};

/// Caveat attached to every multiplicity-based report.
pub const RANK_JUMP_CAVEAT: &str =
    "assumes a non-rank-jumping parameter; rank-jump detection is out of scope";

/// A finite rational order or the formal-series sentinel `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SValue {
    Finite(Rat),
    Infinite,
}

impl SValue {
    pub fn finite(r: Rat) -> Self {
        SValue::Finite(r)
    }

    fn admits(&self, value: &Rat) -> bool {
        match self {
            SValue::Infinite => true,
            SValue::Finite(s) => value <= s,
        }
    }

    pub fn render(&self) -> String {
        match self {
            SValue::Infinite => "inf".into(),
            SValue::Finite(s) => format_rat(s),
        }
    }
}

/// How the reported lower bound relates to the true dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqualityRegime {
    /// Equality holds for very generic parameters (formal case `s = ∞`).
    VeryGenericEquality,
    /// Only the lower bound is claimed at this order.
    LowerBoundOnly,
    /// `rank(A_τ) < d`: the space is zero for very generic parameters.
    ZeroByRank,
}

impl EqualityRegime {
    fn label(&self) -> &'static str {
        match self {
            EqualityRegime::VeryGenericEquality => "very-generic-equality",
            EqualityRegime::LowerBoundOnly => "lower-bound-only",
            EqualityRegime::ZeroByRank => "zero-by-rank",
        }
    }
}

/// Lower bound for the dimension of the Gevrey solution space along `Y_τ`.
#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub tau: Vec<usize>,
    pub s: SValue,
    pub triangulation: Triangulation,
    /// `Σ vol_{ZA}(Δ_σ)` over the order-admissible simplices.
    pub lower_bound: Rat,
    pub equality_regime: EqualityRegime,
    /// Per admissible simplex, the class shifts whose series realize the
    /// bound.
    pub witness_pairs: Vec<(Vec<usize>, Vec<Vec<exact::Int>>)>,
}

impl DimensionReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "tau": self.tau.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "s": self.s.render(),
            "triangulation": self.triangulation.to_json(),
            "lower_bound": format_rat(&self.lower_bound),
            "equality_regime": self.equality_regime.label(),
            "witnesses": self.witness_pairs.iter().map(|(sigma, ks)| serde_json::json!({
                "sigma": sigma.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "k": ks.iter()
                    .map(|k| k.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Filter the (d−1)-simplices of `T(τ)` by the order condition
/// `|A_σ^{-1} a_j| ≤ s` for every `j ∉ τ`.
pub fn t_tau_s(
    a: &IntMatrix,
    tau: &[usize],
    s: &SValue,
    t: &Triangulation,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for sigma in &t.maximal_simplices {
        let inv = a.submatrix_cols(sigma).to_q().inverse()?;
        let ok = (0..a.cols()).filter(|j| !tau.contains(j)).all(|j| {
            let val = exact::coord_sum(&geometry::scaled_column(&inv, a, j));
            s.admits(&val)
        });
        if ok {
            out.push(sigma.clone());
        }
    }
    Ok(out)
}

/// The volume lower bound for Gevrey solutions of order `s` along `Y_τ`,
/// with its witnessing (σ, k) pairs.
pub fn gevrey_dim_lower_bound(
    a: &IntMatrix,
    tau: &[usize],
    s: &SValue,
    seed: u64,
) -> Result<DimensionReport> {
    let d = a.rows();
    let mut cols: Vec<usize> = tau.to_vec();
    cols.sort_unstable();
    cols.dedup();
    let triangulation = geometry::volume_respecting_triangulation(a, &cols, seed)?;
    let rank_deficient = a.submatrix_cols(&cols).rank() < d;
    let admissible = t_tau_s(a, &cols, s, &triangulation)?;
    let index = exact::lattice_index_full(a)?;
    let mut lower = Rat::zero();
    let mut witness_pairs = Vec::new();
    for sigma in &admissible {
        lower += Rat::from_integer(a.submatrix_cols(sigma).det().abs())
            / Rat::from_integer(index.clone());
        witness_pairs.push((
            sigma.clone(),
            series::lambda_class_representatives(a, sigma)?,
        ));
    }
    let equality_regime = if rank_deficient {
        EqualityRegime::ZeroByRank
    } else if matches!(s, SValue::Infinite) {
        EqualityRegime::VeryGenericEquality
    } else {
        EqualityRegime::LowerBoundOnly
    };
    Ok(DimensionReport {
        tau: cols,
        s: s.clone(),
        triangulation,
        lower_bound: lower,
        equality_regime,
        witness_pairs,
    })
}

/// Dimension of the formal solution space along `Y_τ` for very generic
/// parameters: `vol_{ZA}(Δ_τ)`, zero below full rank.
pub fn formal_dim_very_generic(a: &IntMatrix, tau: &[usize]) -> Result<Rat> {
    geometry::normalized_volume(a, tau)
}

fn check_section_assumptions(a: &IntMatrix) -> Result<()> {
    if !geometry::is_pointed(a) {
        return Err(Error::AssumptionsViolated {
            reason: "the configuration is not pointed".into(),
        });
    }
    let index = exact::lattice_index_full(a)?;
    if !index.is_one() {
        return Err(Error::AssumptionsViolated {
            reason: format!("ZA has index {} in Z^d, expected 1", index),
        });
    }
    Ok(())
}

/// Exact stand-in for `s + ε`: the midpoint between `s` and the next
/// umbrella breakpoint of the hyperplane pattern, or `s + 1` when none.
fn just_above(a: &IntMatrix, tau: &[usize], s: &Rat) -> Result<Rat> {
    let breakpoints = geometry::umbrella_breakpoints(a, tau)?;
    Ok(match breakpoints.into_iter().find(|b| b > s) {
        Some(next) => (s + next) / Rat::from_integer(exact::Int::from(2)),
        None => s + Rat::one(),
    })
}

/// Facet index sets of the pattern umbrella evaluated just above `s`.
fn facets_above(a: &IntMatrix, i: usize, s: &Rat) -> Result<Vec<Vec<usize>>> {
    let tau: Vec<usize> = (0..a.cols()).filter(|&j| j != i).collect();
    let sample = just_above(a, &tau, s)?;
    let weight = WeightVector::pattern(a.cols(), &tau, &sample)?;
    Ok(geometry::umbrella(a, &weight)?.facet_sets(a.rows()))
}

/// Multiplicity of the zero conormal in the weighted characteristic cycle at
/// `s + ε`, for the hyperplane pattern excluding column `i`: the sum of
/// `vol_{Z^d}(Δ_{τ'})` over all umbrella facets.
///
/// The facets span pairwise interior-disjoint cones, so the sum is the
/// volume of their union.
pub fn sw_multiplicity_empty(a: &IntMatrix, i: usize, s: &Rat) -> Result<Rat> {
    check_section_assumptions(a)?;
    let mut total = Rat::zero();
    for facet in facets_above(a, i, s)? {
        total += geometry::vol_zd(a, &facet);
    }
    assert!(total.is_integer());
    Ok(total)
}

/// Multiplicity of the hyperplane conormal at `s + ε`: the sum of
/// `vol_{Z^d}(Δ_{τ'})` over the umbrella facets containing column `i`.
pub fn sw_multiplicity_hyperplane(a: &IntMatrix, s: &Rat, i: usize) -> Result<Rat> {
    check_section_assumptions(a)?;
    let mut total = Rat::zero();
    for facet in facets_above(a, i, s)? {
        if facet.contains(&i) {
            total += geometry::vol_zd(a, &facet);
        }
    }
    assert!(total.is_integer());
    Ok(total)
}

/// Dimension of the degree-zero irregularity along `{x_i = 0}` at generic
/// points, for non-rank-jumping parameters:
/// `Σ_{i∉τ'} vol_{Z^d}(Δ_{τ'})` over the umbrella facets just above `s`
/// minus the same sum just above 1.
///
/// Sums run over facets: lower-dimensional faces carry no d-volume. The
/// right-continuous reading (evaluation just above `s`) is forced by the
/// agreement with the triangulation route, which uses the non-strict order
/// test.
pub fn irregularity_dimension_hyperplane(a: &IntMatrix, i: usize, s: &Rat) -> Result<Rat> {
    check_section_assumptions(a)?;
    if s < &Rat::one() {
        return Err(Error::InvalidInput {
            field: "s".into(),
            reason: "the Gevrey order must be at least 1".into(),
        });
    }
    let sum_excluding = |facets: Vec<Vec<usize>>| -> Rat {
        facets
            .iter()
            .filter(|f| !f.contains(&i))
            .map(|f| geometry::vol_zd(a, f))
            .sum()
    };
    let at_s = sum_excluding(facets_above(a, i, s)?);
    let at_one = sum_excluding(facets_above(a, i, &Rat::one())?);
    let diff = at_s - at_one;
    assert!(!diff.is_negative(), "irregularity dimension must be >= 0");
    assert!(diff.is_integer());
    Ok(diff)
}
