//! Slopes along coordinate hyperplanes by two independent combinatorial
//! routes, candidate indices along higher-codimension subspaces, and the
//! combinatorial generators of the radical weighted initial ideal.
//!
//! Route one enumerates the witness sets
//! `Ω_{Y_τ}^{(s)} = {σ ⊆ τ : det A_σ ≠ 0, max_{i∉τ} |A_σ^{-1}a_i| = s,
//! |A_σ^{-1}a_j| ≤ 1 ∀ j ∈ τ}`; route two scans the pattern umbrella for
//! facet jumps. Along a hyperplane the two value sets above 1 agree, and the
//! reports cross-check this equality exactly. In codimension two or more the
//! umbrella route can produce values that no witness realizes; the subspace
//! report flags that gap instead of resolving it.

use num_traits::{One, Signed, Zero};

use crate::exact::{coord_sum, format_rat, kernel_basis_any, Int, IntMatrix, Rat};
use crate::geometry::{self, WeightVector};
use crate::{Error, Result};

/// Witnessing simplices for one slope value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaWitness {
    pub s0: Rat,
    /// Sorted d-subsets of `τ` realizing the value.
    pub simplices: Vec<Vec<usize>>,
}

impl OmegaWitness {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "s0": format_rat(&self.s0),
            "simplices": self.simplices.iter()
                .map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// All per-simplex data the Ω-enumeration needs: the simplices inside `τ`
/// whose scaled columns stay on or below `H_σ` over `τ`, with the attained
/// transverse maximum.
fn admissible_simplices(a: &IntMatrix, tau: &[usize]) -> Result<Vec<(Vec<usize>, Option<Rat>)>> {
    let d = a.rows();
    let subsets: Vec<Vec<usize>> = geometry::polytope::combinations(tau.len(), d)
        .into_iter()
        .map(|c| c.into_iter().map(|i| tau[i]).collect())
        .collect();
    let results = crate::par::map_slice(&subsets, |sigma| -> Option<(Vec<usize>, Option<Rat>)> {
        let a_sig = a.submatrix_cols(sigma);
        if a_sig.det().is_zero() {
            return None;
        }
        let inv = a_sig.to_q().inverse().ok()?;
        let mut max_out: Option<Rat> = None;
        for j in 0..a.cols() {
            if sigma.contains(&j) {
                continue;
            }
            let val = coord_sum(&geometry::scaled_column(&inv, a, j));
            if tau.contains(&j) {
                if val > Rat::one() {
                    return None;
                }
            } else {
                max_out = Some(match max_out {
                    None => val,
                    Some(m) => m.max(val),
                });
            }
        }
        Some((sigma.clone(), max_out))
    });
    Ok(results.into_iter().flatten().collect())
}

/// The witness set `Ω_{Y_τ}^{(s0)}` by exhaustive enumeration of d-subsets
/// of `τ` with the exact three-part test. An empty list is a valid result.
pub fn omega_set(a: &IntMatrix, tau: &[usize], s0: &Rat) -> Result<OmegaWitness> {
    let mut simplices: Vec<Vec<usize>> = admissible_simplices(a, tau)?
        .into_iter()
        .filter(|(_, max_out)| max_out.as_ref() == Some(s0))
        .map(|(sigma, _)| sigma)
        .collect();
    simplices.sort();
    Ok(OmegaWitness {
        s0: s0.clone(),
        simplices,
    })
}

/// Slopes of the system along the hyperplane `{x_i = 0}` with the two routes
/// cross-checked.
#[derive(Clone, Debug)]
pub struct SlopeReport {
    /// The excluded column (0-based).
    pub hyperplane: usize,
    /// Slope values above 1, sorted.
    pub slopes: Vec<Rat>,
    /// One witness set per slope.
    pub witnesses: Vec<OmegaWitness>,
    /// All pattern-umbrella breakpoints (including values at most 1).
    pub umbrella_breakpoints: Vec<Rat>,
    /// Whether the Ω-derived values equal the breakpoints above 1.
    pub cross_check: bool,
}

impl SlopeReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "hyperplane": self.hyperplane + 1,
            "slopes": self.slopes.iter().map(format_rat).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
            "umbrella_breakpoints": self.umbrella_breakpoints.iter()
                .map(format_rat).collect::<Vec<_>>(),
            "cross_check": if self.cross_check { "pass" } else { "fail" },
        })
    }
}

/// Gather the Ω-realized values over all admissible simplices, grouped.
fn realized_values(a: &IntMatrix, tau: &[usize]) -> Result<Vec<OmegaWitness>> {
    let mut by_value: std::collections::BTreeMap<Rat, Vec<Vec<usize>>> = Default::default();
    for (sigma, max_out) in admissible_simplices(a, tau)? {
        if let Some(value) = max_out {
            by_value.entry(value).or_default().push(sigma);
        }
    }
    Ok(by_value
        .into_iter()
        .map(|(s0, mut simplices)| {
            simplices.sort();
            OmegaWitness { s0, simplices }
        })
        .collect())
}

/// All slopes along `{x_i = 0}`: the Ω route and the umbrella-jump route,
/// compared exactly.
pub fn slopes_along_hyperplane(a: &IntMatrix, i: usize) -> Result<SlopeReport> {
    if i >= a.cols() {
        return Err(Error::InvalidInput {
            field: "hyperplane".into(),
            reason: format!("column {} out of range", i + 1),
        });
    }
    let tau: Vec<usize> = (0..a.cols()).filter(|&j| j != i).collect();
    let realized: Vec<OmegaWitness> = realized_values(a, &tau)?
        .into_iter()
        .filter(|w| w.s0 > Rat::one())
        .collect();
    let slopes: Vec<Rat> = realized.iter().map(|w| w.s0.clone()).collect();
    let breakpoints = geometry::umbrella_breakpoints(a, &tau)?;
    let above_one: Vec<Rat> = breakpoints
        .iter()
        .filter(|b| **b > Rat::one())
        .cloned()
        .collect();
    let cross_check = slopes == above_one;
    Ok(SlopeReport {
        hyperplane: i,
        slopes,
        witnesses: realized,
        umbrella_breakpoints: breakpoints,
        cross_check,
    })
}

/// Candidate indices along a subspace of arbitrary codimension.
#[derive(Clone, Debug)]
pub struct SubspaceReport {
    pub tau: Vec<usize>,
    /// Gevrey indices realized by constructed series, with witnesses.
    pub realized: Vec<OmegaWitness>,
    /// All pattern-umbrella breakpoints.
    pub umbrella_breakpoints: Vec<Rat>,
    /// Breakpoints above 1 (the algebraic-slope candidates).
    pub candidates: Vec<Rat>,
    /// Candidates realized by no witness simplex.
    pub gaps: Vec<Rat>,
}

impl SubspaceReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "tau": self.tau.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "realized": self.realized.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
            "umbrella_breakpoints": self.umbrella_breakpoints.iter()
                .map(format_rat).collect::<Vec<_>>(),
            "candidates": self.candidates.iter().map(format_rat).collect::<Vec<_>>(),
            "gaps": self.gaps.iter().map(format_rat).collect::<Vec<_>>(),
        })
    }
}

/// Both routes along `Y_τ`: Ω-realized indices and umbrella breakpoints.
///
/// Along subspaces of codimension two or more, breakpoints that no simplex
/// realizes are reported in `gaps` rather than called slopes: they are
/// algebraic-slope candidates only.
pub fn candidate_indices_along_subspace(a: &IntMatrix, tau: &[usize]) -> Result<SubspaceReport> {
    let mut tau_sorted: Vec<usize> = tau.to_vec();
    tau_sorted.sort_unstable();
    tau_sorted.dedup();
    let realized: Vec<OmegaWitness> = if tau_sorted.len() == a.cols() {
        Vec::new()
    } else {
        realized_values(a, &tau_sorted)?
            .into_iter()
            .filter(|w| w.s0 > Rat::one())
            .collect()
    };
    let umbrella_breakpoints = geometry::umbrella_breakpoints(a, &tau_sorted)?;
    let candidates: Vec<Rat> = umbrella_breakpoints
        .iter()
        .filter(|b| **b > Rat::one())
        .cloned()
        .collect();
    let gaps: Vec<Rat> = candidates
        .iter()
        .filter(|c| !realized.iter().any(|w| &w.s0 == *c))
        .cloned()
        .collect();
    Ok(SubspaceReport {
        tau: tau_sorted,
        realized,
        umbrella_breakpoints,
        candidates,
        gaps,
    })
}

/// A binomial generator `ξ^{plus} − ξ^{minus}` supported in a facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialGenerator {
    pub plus: Vec<Int>,
    pub minus: Vec<Int>,
    /// A facet containing the support.
    pub facet: Vec<usize>,
}

/// Combinatorial generators of the radical of the weighted initial ideal.
#[derive(Clone, Debug)]
pub struct RadicalGenerators {
    pub weight: WeightVector,
    pub facets: Vec<Vec<usize>>,
    /// Type i: minimal index sets not contained in any facet (squarefree
    /// monomials `ξ_{i_1}⋯ξ_{i_r}`).
    pub monomials: Vec<Vec<usize>>,
    /// Type ii: a lattice basis per facet of the kernel vectors supported in
    /// it, a generating set modulo saturation.
    pub binomials: Vec<BinomialGenerator>,
}

impl RadicalGenerators {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "weight": self.weight.values().iter().map(format_rat).collect::<Vec<_>>(),
            "facets": self.facets.iter()
                .map(|f| f.iter().map(|i| i + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "monomials": self.monomials.iter()
                .map(|m| m.iter().map(|i| i + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "binomials": self.binomials.iter().map(|b| serde_json::json!({
                "plus": b.plus.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "minus": b.minus.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "facet": b.facet.iter().map(|i| i + 1).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Emit the two generator families of the radical weighted initial ideal:
/// minimal non-faces of the umbrella as squarefree monomials, and per-facet
/// kernel lattice bases as binomials.
pub fn radical_initial_ideal_generators(
    a: &IntMatrix,
    weight: &WeightVector,
) -> Result<RadicalGenerators> {
    let n = a.cols();
    let u = geometry::umbrella(a, weight)?;
    let facets = u.facet_sets(a.rows());

    let contained = |set: &[usize]| facets.iter().any(|f| set.iter().all(|i| f.contains(i)));
    let mut monomials: Vec<Vec<usize>> = Vec::new();
    for size in 1..=n {
        for subset in geometry::polytope::combinations(n, size) {
            if contained(&subset) {
                continue;
            }
            if monomials
                .iter()
                .any(|m| m.iter().all(|i| subset.contains(i)))
            {
                continue; // a smaller non-face is already inside
            }
            monomials.push(subset);
        }
    }

    let mut binomials: Vec<BinomialGenerator> = Vec::new();
    let mut seen: std::collections::BTreeSet<Vec<Int>> = Default::default();
    for facet in &facets {
        let basis = kernel_basis_any(&a.submatrix_cols(facet));
        for local in basis {
            let mut full = vec![Int::zero(); n];
            for (pos, &col) in facet.iter().enumerate() {
                full[col] = local[pos].clone();
            }
            // normalize the sign: first nonzero entry positive
            if let Some(first) = full.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    for x in &mut full {
                        *x = -x.clone();
                    }
                }
            } else {
                continue;
            }
            if !seen.insert(full.clone()) {
                continue;
            }
            let plus: Vec<Int> = full.iter().map(|x| x.clone().max(Int::zero())).collect();
            let minus: Vec<Int> = full.iter().map(|x| (-x.clone()).max(Int::zero())).collect();
            binomials.push(BinomialGenerator {
                plus,
                minus,
                facet: facet.clone(),
            });
        }
    }

    Ok(RadicalGenerators {
        weight: weight.clone(),
        facets,
        monomials,
        binomials,
    })
}
