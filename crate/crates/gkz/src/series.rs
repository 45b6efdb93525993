//! Truncated Γ-series attached to a simplex: support classes, negative
//! support logic, exact Pochhammer-ratio coefficients, Gevrey multi-orders,
//! and formal application of the Euler and toric operators.
//!
//! A simplex `σ` (d columns of `A` with nonzero determinant) and a shift
//! `k ∈ N^{n−d}` determine the exponent `v^k` with σ-part
//! `A_σ^{-1}(β − A_σ̄·k)` and σ̄-part `k`. The truncated series enumerates the
//! lattice shifts `t` in the congruence class of `k` with total degree at
//! most `N`, keeps those whose negative support matches the base, and
//! attaches the exact coefficient `[v^k]_{u_−} / [v^t]_{u_+}`.
//!
//! The one deliberate exception to exactness is [`gevrey_index_estimate`], a
//! floating-point regression that is diagnostic only.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{self, coord_sum, format_rat, Int, IntMatrix, QMatrix, Rat};
use crate::geometry::feasibility::{self, LinearConstraint};
use crate::geometry::HyperplaneSide;
use crate::{Error, Result};

/// A d-subset of columns with `det A_σ ≠ 0`, with the cached inverse and
/// kernel block.
#[derive(Clone, Debug)]
pub struct Simplex {
    /// Column indices (0-based, sorted).
    pub indices: Vec<usize>,
    /// The complement σ̄ (0-based, sorted); series shifts are indexed by it.
    pub complement: Vec<usize>,
    /// `A_σ^{-1}`.
    pub inverse: QMatrix,
    /// `B_σ`, the n×(n−d) kernel block.
    pub kernel_block: QMatrix,
    /// `A_σ^{-1}·A_σ̄` (d×(n−d)).
    ratio: QMatrix,
    a: IntMatrix,
}

impl Simplex {
    pub fn new(a: &IntMatrix, sigma: &[usize]) -> Result<Self> {
        let d = a.rows();
        let mut indices: Vec<usize> = sigma.to_vec();
        indices.sort_unstable();
        indices.dedup();
        if indices.len() != d || indices.iter().any(|&i| i >= a.cols()) {
            return Err(Error::NotASimplex {
                columns: sigma.iter().map(|&i| i + 1).collect(),
            });
        }
        let a_sig = a.submatrix_cols(&indices);
        if a_sig.det().is_zero() {
            return Err(Error::NotASimplex {
                columns: sigma.iter().map(|&i| i + 1).collect(),
            });
        }
        let complement: Vec<usize> = (0..a.cols()).filter(|j| !indices.contains(j)).collect();
        let inverse = a_sig.to_q().inverse()?;
        let kernel_block = exact::kernel_block(a, &indices)?;
        let ratio = inverse.mul(&a.submatrix_cols(&complement).to_q());
        Ok(Simplex {
            indices,
            complement,
            inverse,
            kernel_block,
            ratio,
            a: a.clone(),
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    /// Number of series shift coordinates, `n − d`.
    pub fn shift_len(&self) -> usize {
        self.complement.len()
    }

    /// The full exponent `v^t` for a shift `t ∈ N^{n−d}`.
    pub fn exponent(&self, beta: &[Rat], t: &[Int]) -> Vec<Rat> {
        let tq: Vec<Rat> = t.iter().map(|x| Rat::from_integer(x.clone())).collect();
        let shifted = self.ratio.matvec(&tq);
        let beta_part = self.inverse.matvec(beta);
        let sigma_part: Vec<Rat> = beta_part.iter().zip(&shifted).map(|(b, s)| b - s).collect();
        let mut v = vec![Rat::zero(); self.a.cols()];
        for (pos, &i) in self.indices.iter().enumerate() {
            v[i] = sigma_part[pos].clone();
        }
        for (pos, &j) in self.complement.iter().enumerate() {
            v[j] = tq[pos].clone();
        }
        v
    }

    /// Whether two shifts lie in the same congruence class `Λ`.
    pub fn same_class(&self, t: &[Int], k: &[Int]) -> bool {
        let diff: Vec<Rat> = t
            .iter()
            .zip(k)
            .map(|(x, y)| Rat::from_integer(x - y))
            .collect();
        self.ratio.matvec(&diff).iter().all(|x| x.is_integer())
    }

    /// `u(m) = B_σ·m` for `m = t − k`, as an integer vector (the class test
    /// guarantees integrality).
    fn kernel_shift(&self, t: &[Int], k: &[Int]) -> Result<Vec<Int>> {
        let m: Vec<Rat> = t
            .iter()
            .zip(k)
            .map(|(x, y)| Rat::from_integer(x - y))
            .collect();
        let u = self.kernel_block.matvec(&m);
        u.into_iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(Error::Internal(
                        "kernel shift is not integral; class test violated".into(),
                    ))
                }
            })
            .collect()
    }
}

/// A shift together with its exponent vector.
#[derive(Clone, Debug)]
pub struct ShiftedExponent {
    pub k: Vec<Int>,
    pub v: Vec<Rat>,
}

/// One term of a truncated series: exponent `v^t`, exact coefficient, and
/// the σ̄-shift `t` it came from (empty on operator images).
#[derive(Clone, Debug)]
pub struct SeriesTerm {
    pub exponent: Vec<Rat>,
    pub coeff: Rat,
    pub shift: Vec<Int>,
}

/// Gevrey bookkeeping for a series attached to `σ`, reported along `Y_τ`.
#[derive(Clone, Debug)]
pub struct GevreyData {
    /// `s_i = |A_σ^{-1} a_i|` for every column `i ∉ σ`.
    pub multiorder: Vec<(usize, Rat)>,
    /// `max { s_i : i ∉ τ }`, or 1 when that set is empty.
    pub order: Rat,
    /// The τ defining the subspace `Y_τ` the order refers to.
    pub along: Vec<usize>,
    /// Side of `H_σ` for every column outside σ.
    pub classification: Vec<(usize, HyperplaneSide)>,
}

impl GevreyData {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "multiorder": self.multiorder.iter().map(|(i, s)| serde_json::json!({
                "column": i + 1, "s": format_rat(s),
            })).collect::<Vec<_>>(),
            "order": format_rat(&self.order),
            "along": self.along.iter().map(|i| i + 1).collect::<Vec<_>>(),
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

/// A truncated Γ-series: base exponent, congruence class, exact terms up to
/// total σ̄-degree `N`, and Gevrey data along `Y_σ`.
#[derive(Clone, Debug)]
pub struct GammaSeriesTruncation {
    pub simplex: Simplex,
    pub beta: Vec<Rat>,
    pub base: ShiftedExponent,
    /// Lex-least representative of the class `Λ_k` this series lives on.
    pub class_rep: Vec<Int>,
    pub terms: Vec<SeriesTerm>,
    pub truncation_degree: u32,
    pub gevrey: GevreyData,
}

impl GammaSeriesTruncation {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sigma": self.simplex.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "k": self.base.k.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "class_rep": self.class_rep.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "truncation_degree": self.truncation_degree,
            "terms": self.terms.iter().map(|t| serde_json::json!({
                "exponent": t.exponent.iter().map(format_rat).collect::<Vec<_>>(),
                "coeff": format_rat(&t.coeff),
            })).collect::<Vec<_>>(),
            "gevrey": self.gevrey.to_json(),
        })
    }

    /// Render the first `max_terms` terms in `c · x1^e1 x2^e2 …` notation.
    pub fn pretty(&self, max_terms: usize) -> String {
        let mut out = String::new();
        for (n, term) in self.terms.iter().take(max_terms).enumerate() {
            if n > 0 {
                out.push_str(" + ");
            }
            out.push('(');
            out.push_str(&format_rat(&term.coeff));
            out.push(')');
            for (i, e) in term.exponent.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                out.push_str(&format!(" x{}^({})", i + 1, format_rat(e)));
            }
        }
        if self.terms.len() > max_terms {
            out.push_str(" + ...");
        }
        out
    }
}

/// Indices whose entries are negative integers (0-based).
pub fn nsupp(v: &[Rat]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| x.is_integer() && x.is_negative())
        .map(|(i, _)| i)
        .collect()
}

/// Falling-factorial Pochhammer symbol `[v]_m = v(v−1)⋯(v−m+1)`.
///
/// Accumulated as one integer product over a denominator power, normalizing
/// once at the end: canonicalizing after every factor is far too slow for
/// the long products the series need.
pub fn pochhammer(v: &Rat, m: u64) -> Rat {
    let (num, den) = pochhammer_parts(v, m);
    Rat::new(num, den)
}

fn pochhammer_parts(v: &Rat, m: u64) -> (Int, Int) {
    let p = v.numer();
    let q = v.denom();
    let mut num = Int::one();
    for j in 0..m {
        num *= p - Int::from(j) * q;
        if num.is_zero() {
            return (num, Int::one());
        }
    }
    (num, q.pow(m as u32))
}

/// `[v]_u = Π_i [v_i]_{u_i}` for a nonnegative integer multi-index `u`.
pub fn pochhammer_vec(v: &[Rat], u: &[Int]) -> Rat {
    let mut num = Int::one();
    let mut den = Int::one();
    for (vi, ui) in v.iter().zip(u) {
        debug_assert!(!ui.is_negative());
        let m: u64 = ui.try_into().expect("pochhammer index fits u64");
        let (n, d) = pochhammer_parts(vi, m);
        if n.is_zero() {
            return Rat::zero();
        }
        num *= n;
        den *= d;
    }
    Rat::new(num, den)
}

/// All `t ∈ N^m` with `Σ t ≤ max_total`, in graded lexicographic order.
pub(crate) fn enumerate_shifts(m: usize, max_total: u32) -> Vec<Vec<Int>> {
    fn comps(m: usize, total: u32, out: &mut Vec<Vec<Int>>, prefix: &mut Vec<Int>) {
        if m == 1 {
            prefix.push(Int::from(total));
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(Int::from(first));
            comps(m - 1, total - first, out, prefix);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        out.push(Vec::new());
        return out;
    }
    for total in 0..=max_total {
        comps(m, total, &mut out, &mut Vec::new());
    }
    out
}

/// The `[ZA : Zσ]` class representatives as shifts, lex-least per class.
pub fn lambda_class_representatives(a: &IntMatrix, sigma: &[usize]) -> Result<Vec<Vec<Int>>> {
    Ok(exact::quotient_group(a, sigma)?.representatives)
}

/// Result of the bounded minimal-negative-support search.
#[derive(Clone, Debug)]
pub struct MinimalSupportRep {
    pub k: Vec<Int>,
    /// Negative support of `v^k` (0-based column indices).
    pub nsupp: Vec<usize>,
    /// True when minimality is proved: the support is empty, or every
    /// strictly smaller support region is rationally infeasible.
    pub certified: bool,
}

/// Search the class of `k` for the shift minimizing the negative support
/// under strict inclusion, up to total degree `bound`.
pub fn minimal_negative_support_rep(
    a: &IntMatrix,
    sigma: &[usize],
    beta: &[Rat],
    k: &[Int],
    bound: u32,
) -> Result<MinimalSupportRep> {
    let simplex = Simplex::new(a, sigma)?;
    let m = simplex.shift_len();
    if k.len() != m {
        return Err(Error::InvalidInput {
            field: "k".into(),
            reason: format!("expected {} shift coordinates, got {}", m, k.len()),
        });
    }
    let mut candidates: Vec<(Vec<Int>, Vec<usize>)> = Vec::new();
    for t in enumerate_shifts(m, bound) {
        if simplex.same_class(&t, k) {
            let supp = nsupp(&simplex.exponent(beta, &t));
            candidates.push((t, supp));
        }
    }
    if candidates.is_empty() {
        return Err(Error::Internal(
            "class contains no shifts within bound".into(),
        ));
    }
    let minimal: Vec<&(Vec<Int>, Vec<usize>)> = candidates
        .iter()
        .filter(|(_, supp)| {
            !candidates
                .iter()
                .any(|(_, other)| is_strict_subset(other, supp))
        })
        .collect();
    let best = minimal
        .iter()
        .min_by(|x, y| x.0.cmp(&y.0))
        .expect("nonempty");
    let (k_best, supp_best) = (best.0.clone(), best.1.clone());

    let certified = if supp_best.is_empty() {
        true
    } else {
        proper_subsets(&supp_best)
            .iter()
            .all(|eta| !support_region_feasible(&simplex, beta, &k_best, eta))
    };
    Ok(MinimalSupportRep {
        k: k_best,
        nsupp: supp_best,
        certified,
    })
}

/// τ-aware refinement of [`minimal_negative_support_rep`]: additionally
/// require the exponent to be a nonnegative integer on every σ-column
/// transverse to `Y_τ`, so the series is a formal series along `Y_τ`.
///
/// This is what selects the shift used on subspaces of codimension greater
/// than one, where `σ ⊄ τ`. When no class shift within the bound meets the
/// formality constraint (for instance a transverse coordinate is not even an
/// integer on the class), the unconstrained search result is returned.
pub fn minimal_negative_support_rep_along(
    a: &IntMatrix,
    sigma: &[usize],
    beta: &[Rat],
    k: &[Int],
    bound: u32,
    tau: &[usize],
) -> Result<MinimalSupportRep> {
    let simplex = Simplex::new(a, sigma)?;
    let transverse: Vec<usize> = simplex
        .indices
        .iter()
        .copied()
        .filter(|i| !tau.contains(i))
        .collect();
    if transverse.is_empty() {
        return minimal_negative_support_rep(a, sigma, beta, k, bound);
    }
    let m = simplex.shift_len();
    let mut candidates: Vec<(Vec<Int>, Vec<usize>)> = Vec::new();
    for t in enumerate_shifts(m, bound) {
        if !simplex.same_class(&t, k) {
            continue;
        }
        let v = simplex.exponent(beta, &t);
        let formal = transverse
            .iter()
            .all(|&i| v[i].is_integer() && !v[i].is_negative());
        if formal {
            candidates.push((t, nsupp(&v)));
        }
    }
    if candidates.is_empty() {
        return minimal_negative_support_rep(a, sigma, beta, k, bound);
    }
    let minimal: Vec<&(Vec<Int>, Vec<usize>)> = candidates
        .iter()
        .filter(|(_, supp)| {
            !candidates
                .iter()
                .any(|(_, other)| is_strict_subset(other, supp))
        })
        .collect();
    let best = minimal
        .iter()
        .min_by(|x, y| x.0.cmp(&y.0))
        .expect("nonempty");
    let (k_best, supp_best) = (best.0.clone(), best.1.clone());
    let certified = if supp_best.is_empty() {
        true
    } else {
        proper_subsets(&supp_best).iter().all(|eta| {
            // a support meeting the transverse columns is already excluded
            // by the formality filter
            eta.iter().any(|i| transverse.contains(i))
                || !support_region_feasible(&simplex, beta, &k_best, eta)
        })
    };
    Ok(MinimalSupportRep {
        k: k_best,
        nsupp: supp_best,
        certified,
    })
}

fn is_strict_subset(a: &[usize], b: &[usize]) -> bool {
    a.len() < b.len() && a.iter().all(|x| b.contains(x))
}

fn proper_subsets(set: &[usize]) -> Vec<Vec<usize>> {
    let n = set.len();
    (0..(1u32 << n) - 1)
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| set[i])
                .collect()
        })
        .collect()
}

/// Rational feasibility of the region where the σ-part negative support is
/// exactly `eta` (original column indices).
///
/// Integrality of a σ-part coordinate is constant across a congruence class,
/// so the nonnegativity constraints apply only to coordinates that are
/// integral at the base shift; non-integral coordinates can never enter a
/// negative support.
fn support_region_feasible(
    simplex: &Simplex,
    beta: &[Rat],
    base_shift: &[Int],
    eta: &[usize],
) -> bool {
    let m = simplex.shift_len();
    let base = simplex.inverse.matvec(beta);
    let v_base = simplex.exponent(beta, base_shift);
    let mut cons: Vec<LinearConstraint> = Vec::new();
    for j in 0..m {
        let mut coeffs = vec![Rat::zero(); m];
        coeffs[j] = Rat::one();
        cons.push(LinearConstraint::ge(coeffs, Rat::zero()));
    }
    for (pos, &col) in simplex.indices.iter().enumerate() {
        let integral = v_base[col].is_integer();
        let row: Vec<Rat> = (0..m).map(|j| simplex.ratio[(pos, j)].clone()).collect();
        let neg_row: Vec<Rat> = row.iter().map(|x| -x.clone()).collect();
        if eta.contains(&col) {
            // base_i − row·t < 0
            cons.push(LinearConstraint::lt(neg_row, -base[pos].clone()));
        } else if integral {
            // base_i − row·t ≥ 0
            cons.push(LinearConstraint::ge(neg_row, -base[pos].clone()));
        }
    }
    feasibility::feasible(&cons, m)
}

/// Gevrey multi-order of the series attached to `σ`, reported along `Y_τ`.
pub fn gevrey_multiorder(a: &IntMatrix, sigma: &[usize], tau: &[usize]) -> Result<GevreyData> {
    let simplex = Simplex::new(a, sigma)?;
    let mut multiorder = Vec::new();
    let mut classification = Vec::new();
    for &j in &simplex.complement {
        let s_j = coord_sum(&crate::geometry::scaled_column(&simplex.inverse, a, j));
        let side = match s_j.cmp(&Rat::one()) {
            std::cmp::Ordering::Less => HyperplaneSide::Below,
            std::cmp::Ordering::Equal => HyperplaneSide::On,
            std::cmp::Ordering::Greater => HyperplaneSide::Above,
        };
        multiorder.push((j, s_j));
        classification.push((j, side));
    }
    let order = multiorder
        .iter()
        .filter(|(j, _)| !tau.contains(j))
        .map(|(_, s)| s.clone())
        .max()
        .unwrap_or_else(Rat::one)
        .max(Rat::one());
    Ok(GevreyData {
        multiorder,
        order,
        along: {
            let mut t = tau.to_vec();
            t.sort_unstable();
            t.dedup();
            t
        },
        classification,
    })
}

/// The canonical `τ = { j : a_j ∉ H_σ^+ }` attached to a simplex.
pub fn canonical_tau(a: &IntMatrix, sigma: &[usize]) -> Result<Vec<usize>> {
    let simplex = Simplex::new(a, sigma)?;
    let mut tau = simplex.indices.clone();
    for &j in &simplex.complement {
        let s_j = coord_sum(&crate::geometry::scaled_column(&simplex.inverse, a, j));
        if s_j <= Rat::one() {
            tau.push(j);
        }
    }
    tau.sort_unstable();
    Ok(tau)
}

/// Outcome of the bounded genericity check for `β` relative to a simplex.
///
/// Full genericity is a countable-intersection condition and not decidable;
/// this certifies only what the enumerated box sees, so a clean result is
/// "generic so far" and says nothing beyond the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Genericity {
    /// No σ-coordinate of any `v^t` with `|t| ≤ bound` is an integer.
    GenericSoFar { bound: u32 },
    /// An integral σ-coordinate was found at the witness shift.
    Degenerate { shift: Vec<Int>, column: usize },
}

/// Scan the enumeration box for integral exponent coordinates.
pub fn beta_genericity(
    a: &IntMatrix,
    sigma: &[usize],
    beta: &[Rat],
    bound: u32,
) -> Result<Genericity> {
    let simplex = Simplex::new(a, sigma)?;
    for t in enumerate_shifts(simplex.shift_len(), bound) {
        let v = simplex.exponent(beta, &t);
        if let Some(&col) = simplex.indices.iter().find(|&&i| v[i].is_integer()) {
            return Ok(Genericity::Degenerate {
                shift: t,
                column: col,
            });
        }
    }
    Ok(Genericity::GenericSoFar { bound })
}

fn build_series(
    simplex: Simplex,
    beta: &[Rat],
    base_k: &[Int],
    class_rep: Vec<Int>,
    shifts: Vec<Vec<Int>>,
    n_trunc: u32,
) -> Result<GammaSeriesTruncation> {
    let v_base = simplex.exponent(beta, base_k);
    let gevrey = gevrey_multiorder(simplex.matrix(), &simplex.indices, &simplex.indices)?;
    let computed = crate::par::map_slice(&shifts, |t| -> Result<SeriesTerm> {
        let u = simplex.kernel_shift(t, base_k)?;
        let u_plus: Vec<Int> = u.iter().map(|x| x.clone().max(Int::zero())).collect();
        let u_minus: Vec<Int> = u.iter().map(|x| (-x.clone()).max(Int::zero())).collect();
        let v_t = simplex.exponent(beta, t);
        let num = pochhammer_vec(&v_base, &u_minus);
        let den = pochhammer_vec(&v_t, &u_plus);
        if den.is_zero() {
            return Err(Error::Internal(
                "vanishing Pochhammer denominator inside the support class".into(),
            ));
        }
        Ok(SeriesTerm {
            exponent: v_t,
            coeff: num / den,
            shift: t.clone(),
        })
    });
    let mut terms = Vec::with_capacity(computed.len());
    for t in computed {
        terms.push(t?);
    }
    Ok(GammaSeriesTruncation {
        base: ShiftedExponent {
            k: base_k.to_vec(),
            v: v_base,
        },
        beta: beta.to_vec(),
        class_rep,
        terms,
        truncation_degree: n_trunc,
        gevrey,
        simplex,
    })
}

/// The truncated series `φ_σ^k` up to total σ̄-degree `N`.
///
/// Terms enumerate the shifts `t` in the class of `k` whose negative support
/// equals that of `v^k`; the `t = k` term has coefficient 1. Pass a `k` with
/// minimal negative support (see [`minimal_negative_support_rep`]) when a
/// solution of the system is wanted; other `k` still produce a well-defined
/// series, which the operator tests then reject.
pub fn gamma_series_truncated(
    a: &IntMatrix,
    sigma: &[usize],
    beta: &[Rat],
    k: &[Int],
    n_trunc: u32,
) -> Result<GammaSeriesTruncation> {
    let simplex = Simplex::new(a, sigma)?;
    let m = simplex.shift_len();
    if k.len() != m {
        return Err(Error::InvalidInput {
            field: "k".into(),
            reason: format!("expected {} shift coordinates, got {}", m, k.len()),
        });
    }
    if beta.len() != a.rows() {
        return Err(Error::InvalidInput {
            field: "beta".into(),
            reason: format!("expected length {}, got {}", a.rows(), beta.len()),
        });
    }
    let total_k: Int = k.iter().sum();
    if Int::from(n_trunc) < total_k {
        return Err(Error::InvalidInput {
            field: "N".into(),
            reason: format!("truncation degree {} is below |k| = {}", n_trunc, total_k),
        });
    }
    let base_supp = nsupp(&simplex.exponent(beta, k));
    let shifts: Vec<Vec<Int>> = enumerate_shifts(m, n_trunc)
        .into_iter()
        .filter(|t| simplex.same_class(t, k))
        .filter(|t| nsupp(&simplex.exponent(beta, t)) == base_supp)
        .collect();
    let class_rep = lex_least_class_rep(&simplex, k);
    build_series(simplex, beta, k, class_rep, shifts, n_trunc)
}

fn lex_least_class_rep(simplex: &Simplex, k: &[Int]) -> Vec<Int> {
    let q = exact::quotient_group(simplex.matrix(), &simplex.indices)
        .expect("simplex already validated");
    q.representatives[q.class_index(k)].clone()
}

/// The Euler and toric operators of the system.
#[derive(Clone, Debug)]
pub enum OperatorSpec {
    /// `E_i − β_i = Σ_j a_ij x_j ∂_j − β_i`.
    Euler { row: usize, value: Rat },
    /// `□_u = ∂^{u_+} − ∂^{u_−}` for `u` in the kernel lattice.
    Toric { u: Vec<Int> },
}

impl OperatorSpec {
    pub fn euler(a: &IntMatrix, beta: &[Rat], row: usize) -> Result<Self> {
        if row >= a.rows() || beta.len() != a.rows() {
            return Err(Error::InvalidInput {
                field: "row".into(),
                reason: "Euler row out of range".into(),
            });
        }
        Ok(OperatorSpec::Euler {
            row,
            value: beta[row].clone(),
        })
    }

    pub fn toric(a: &IntMatrix, u: Vec<Int>) -> Result<Self> {
        if u.len() != a.cols() || !a.matvec(&u).iter().all(|x| x.is_zero()) {
            return Err(Error::InvalidInput {
                field: "u".into(),
                reason: "toric exponent must lie in ker(A)".into(),
            });
        }
        Ok(OperatorSpec::Toric { u })
    }
}

/// Result of formally applying an operator to a truncated series.
///
/// Terms whose total σ̄-degree is at most `reliable_degree` are exact images
/// of the untruncated series; beyond that they may be truncation artifacts.
#[derive(Clone, Debug)]
pub struct OperatorOutput {
    pub reliable: Vec<SeriesTerm>,
    pub tail: Vec<SeriesTerm>,
    pub reliable_degree: i64,
}

impl OperatorOutput {
    /// Exact annihilation on the trusted region.
    pub fn annihilated_on_reliable(&self) -> bool {
        self.reliable.is_empty()
    }
}

/// Apply an operator term by term, combining like exponents and dropping
/// zero coefficients.
pub fn apply_operator(series: &GammaSeriesTruncation, op: &OperatorSpec) -> OperatorOutput {
    let n_trunc = i64::from(series.truncation_degree);
    match op {
        OperatorSpec::Euler { row, value } => {
            let a = series.simplex.matrix();
            let mut out = Vec::new();
            for term in &series.terms {
                let mult: Rat = (0..a.cols())
                    .map(|j| Rat::from_integer(a[(*row, j)].clone()) * &term.exponent[j])
                    .sum::<Rat>()
                    - value;
                if !mult.is_zero() {
                    out.push(SeriesTerm {
                        exponent: term.exponent.clone(),
                        coeff: &term.coeff * mult,
                        shift: term.shift.clone(),
                    });
                }
            }
            OperatorOutput {
                reliable: out,
                tail: Vec::new(),
                reliable_degree: n_trunc,
            }
        }
        OperatorSpec::Toric { u } => {
            let u_plus: Vec<Int> = u.iter().map(|x| x.clone().max(Int::zero())).collect();
            let u_minus: Vec<Int> = u.iter().map(|x| (-x.clone()).max(Int::zero())).collect();
            let shift_plus: Int = u_plus.iter().sum();
            let shift_minus: Int = u_minus.iter().sum();
            let max_shift: i64 = shift_plus
                .max(shift_minus)
                .to_i64()
                .expect("operator degree fits i64");
            let mut acc: std::collections::BTreeMap<Vec<Rat>, Rat> = Default::default();
            let mut add = |exp: Vec<Rat>, c: Rat| {
                let entry = acc.entry(exp).or_insert_with(Rat::zero);
                *entry += c;
            };
            for term in &series.terms {
                let cp = pochhammer_vec(&term.exponent, &u_plus);
                if !cp.is_zero() {
                    let exp: Vec<Rat> = term
                        .exponent
                        .iter()
                        .zip(&u_plus)
                        .map(|(e, s)| e - Rat::from_integer(s.clone()))
                        .collect();
                    add(exp, &term.coeff * cp);
                }
                let cm = pochhammer_vec(&term.exponent, &u_minus);
                if !cm.is_zero() {
                    let exp: Vec<Rat> = term
                        .exponent
                        .iter()
                        .zip(&u_minus)
                        .map(|(e, s)| e - Rat::from_integer(s.clone()))
                        .collect();
                    add(exp, -(&term.coeff * cm));
                }
            }
            let reliable_degree = n_trunc - max_shift;
            let limit = Rat::from_integer(Int::from(reliable_degree));
            let mut reliable = Vec::new();
            let mut tail = Vec::new();
            for (exp, coeff) in acc {
                if coeff.is_zero() {
                    continue;
                }
                let deg: Rat = series
                    .simplex
                    .complement
                    .iter()
                    .map(|&j| exp[j].clone())
                    .sum();
                let term = SeriesTerm {
                    shift: Vec::new(),
                    exponent: exp,
                    coeff,
                };
                if deg <= limit {
                    reliable.push(term);
                } else {
                    tail.push(term);
                }
            }
            OperatorOutput {
                reliable,
                tail,
                reliable_degree,
            }
        }
    }
}

/// One piece of the η-partition of a support class.
#[derive(Clone, Debug)]
pub struct EtaClass {
    /// Negative-support pattern (0-based column indices inside σ).
    pub eta: Vec<usize>,
    /// Class shifts with this pattern, up to the bound, in graded-lex order.
    pub points: Vec<Vec<Int>>,
    /// Whether the region extends to arbitrarily large shifts (exact
    /// recession-cone test on the defining inequalities).
    pub unbounded: bool,
}

/// Partition the class of `k` by the negative support of the σ-part, up to
/// total degree `bound`.
pub fn eta_partition(
    a: &IntMatrix,
    sigma: &[usize],
    beta: &[Rat],
    k: &[Int],
    bound: u32,
) -> Result<Vec<EtaClass>> {
    let simplex = Simplex::new(a, sigma)?;
    let m = simplex.shift_len();
    if k.len() != m {
        return Err(Error::InvalidInput {
            field: "k".into(),
            reason: format!("expected {} shift coordinates, got {}", m, k.len()),
        });
    }
    let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<Vec<Int>>> = Default::default();
    for t in enumerate_shifts(m, bound) {
        if !simplex.same_class(&t, k) {
            continue;
        }
        let supp = nsupp(&simplex.exponent(beta, &t));
        groups.entry(supp).or_default().push(t);
    }
    let classes = groups
        .into_iter()
        .map(|(eta, points)| {
            let unbounded = !recession_rays(&simplex, beta, &eta, &points[0]).is_empty();
            EtaClass {
                eta,
                points,
                unbounded,
            }
        })
        .collect();
    Ok(classes)
}

/// Candidate recession rays of the η-region, normalized to coordinate sum 1.
///
/// A direction `z ≥ 0` keeps the pattern iff `(R z)_i ≥ 0` on η positions
/// and `(R z)_i ≤ 0` on the other integral positions, `R = A_σ^{-1}A_σ̄`.
fn recession_rays(
    simplex: &Simplex,
    beta: &[Rat],
    eta: &[usize],
    witness: &[Int],
) -> Vec<Vec<Rat>> {
    let m = simplex.shift_len();
    if m == 0 {
        return Vec::new();
    }
    let v = simplex.exponent(beta, witness);
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for j in 0..m {
        let mut row = vec![Rat::zero(); m];
        row[j] = -Rat::one();
        rows.push(row);
    }
    for (pos, &col) in simplex.indices.iter().enumerate() {
        let integral = v[col].is_integer();
        let row: Vec<Rat> = (0..m).map(|j| simplex.ratio[(pos, j)].clone()).collect();
        if eta.contains(&col) {
            rows.push(row.iter().map(|x| -x.clone()).collect());
        } else if integral {
            rows.push(row);
        }
    }
    feasibility::cone_candidate_rays(&rows, m)
}

/// The series supported exactly on one η-piece of the class of `k`, based at
/// the lex-least shift of that piece.
pub fn phi_k_eta(
    a: &IntMatrix,
    sigma: &[usize],
    beta: &[Rat],
    k: &[Int],
    eta: &[usize],
    n_trunc: u32,
) -> Result<GammaSeriesTruncation> {
    let simplex = Simplex::new(a, sigma)?;
    let m = simplex.shift_len();
    let mut eta_sorted = eta.to_vec();
    eta_sorted.sort_unstable();
    let mut points: Vec<Vec<Int>> = Vec::new();
    for t in enumerate_shifts(m, n_trunc) {
        if simplex.same_class(&t, k) && nsupp(&simplex.exponent(beta, &t)) == eta_sorted {
            points.push(t);
        }
    }
    let Some(base) = points.iter().min().cloned() else {
        return Err(Error::EmptyClassAtTruncation { bound: n_trunc });
    };
    let class_rep = lex_least_class_rep(&simplex, k);
    let series = build_series(simplex, beta, &base, class_rep, points, n_trunc)?;
    if series.terms.iter().any(|t| t.coeff.is_zero()) {
        return Err(Error::Internal(
            "vanishing coefficient on an η-piece".into(),
        ));
    }
    Ok(series)
}

/// Which rule picked the η-class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionRule {
    /// Exact recession-ray growth comparison decided.
    ExactGrowth,
    /// Floating-point regression broke a tie; the exact comparator is total,
    /// so this is kept only for report compatibility.
    RegressionFallback,
}

/// The η-selection rule: among the η whose series attains the maximal
/// growth class along the canonical `Y_τ`, pick minimal cardinality (ties:
/// lexicographically least).
pub fn select_eta(
    a: &IntMatrix,
    sigma: &[usize],
    beta: &[Rat],
    k: &[Int],
    bound: u32,
) -> Result<(Vec<usize>, SelectionRule)> {
    let simplex = Simplex::new(a, sigma)?;
    let classes = eta_partition(a, sigma, beta, k, bound)?;
    if classes.is_empty() {
        return Err(Error::EmptyClassAtTruncation { bound });
    }
    let tau = canonical_tau(a, sigma)?;
    let gevrey = gevrey_multiorder(a, sigma, &tau)?;
    let s_by_col: std::collections::BTreeMap<usize, Rat> =
        gevrey.multiorder.iter().cloned().collect();
    let mut best: Option<(Rat, usize, Vec<usize>)> = None;
    for class in &classes {
        let rays = recession_rays(&simplex, beta, &class.eta, &class.points[0]);
        let mut index = Rat::one();
        for ray in &rays {
            let mut num = Rat::zero();
            let mut den = Rat::zero();
            for (pos, &col) in simplex.complement.iter().enumerate() {
                let s = &s_by_col[&col];
                num += (s - Rat::one()) * &ray[pos];
                if !tau.contains(&col) {
                    den += &ray[pos];
                }
            }
            if den.is_positive() {
                let idx = Rat::one() + num / den;
                if idx > index {
                    index = idx;
                }
            }
        }
        let key = (index, class.eta.len(), class.eta.clone());
        let better = match &best {
            None => true,
            Some((bi, blen, beta_eta)) => {
                key.0 > *bi
                    || (key.0 == *bi && (key.1 < *blen || (key.1 == *blen && key.2 < *beta_eta)))
            }
        };
        if better {
            best = Some(key);
        }
    }
    Ok((best.unwrap().2, SelectionRule::ExactGrowth))
}

/// Diagnostic regression estimate of the Gevrey index along `Y_τ`.
#[derive(Clone, Copy, Debug)]
pub struct IndexEstimate {
    pub s_hat: f64,
    pub residual: f64,
}

/// Least-squares fit of `log|coefficient|` against `Σ_{i∉τ} log(α_i!)`.
///
/// The only floating-point computation in the crate, diagnostic only. Terms
/// are grouped by their transverse exponent α, keeping the dominant
/// coefficient per group; a linear-in-|α| nuisance regressor absorbs the
/// geometric factor of the series.
pub fn gevrey_index_estimate(
    series: &GammaSeriesTruncation,
    tau: &[usize],
) -> Result<IndexEstimate> {
    const MIN_TERMS: usize = 10;
    let nonzero = series.terms.iter().filter(|t| !t.coeff.is_zero()).count();
    if nonzero < MIN_TERMS {
        return Err(Error::TooFewTerms {
            got: nonzero,
            need: MIN_TERMS,
        });
    }
    let transverse: Vec<usize> = series
        .simplex
        .complement
        .iter()
        .copied()
        .filter(|j| !tau.contains(j))
        .collect();
    let mut crest: std::collections::BTreeMap<Vec<Int>, f64> = Default::default();
    for term in &series.terms {
        if term.coeff.is_zero() {
            continue;
        }
        let alpha: Vec<Int> = transverse
            .iter()
            .map(|&j| {
                let e = &term.exponent[j];
                debug_assert!(e.is_integer());
                e.to_integer()
            })
            .collect();
        let y = ln_rat_abs(&term.coeff);
        let entry = crest.entry(alpha).or_insert(f64::NEG_INFINITY);
        if y > *entry {
            *entry = y;
        }
    }
    // features per crest point: intercept, Σ ln(α_i!), |α|, ln(1 + |α|);
    // the last two absorb the geometric factor and the Stirling correction
    let data: Vec<(Vec<f64>, f64)> = crest
        .iter()
        .map(|(alpha, &y)| {
            let x: f64 = alpha.iter().map(ln_factorial_int).sum();
            let u: f64 = alpha.iter().map(|a| a.to_f64().unwrap_or(0.0)).sum();
            (vec![1.0, x, u, (1.0 + u).ln()], y)
        })
        .collect();
    // shrinking fallback chain in case the design matrix is degenerate
    for keep in [4usize, 3, 2] {
        let Some((coef, rss)) = least_squares(&data, keep) else {
            continue;
        };
        return Ok(IndexEstimate {
            s_hat: 1.0 + coef[1],
            residual: (rss / data.len() as f64).sqrt(),
        });
    }
    // no usable variation in the factorial regressor: no transverse growth
    Ok(IndexEstimate {
        s_hat: 1.0,
        residual: 0.0,
    })
}

/// Plain normal-equation least squares on the first `keep` features.
fn least_squares(data: &[(Vec<f64>, f64)], keep: usize) -> Option<(Vec<f64>, f64)> {
    let mut m = vec![vec![0.0; keep + 1]; keep];
    for (feat, y) in data {
        for i in 0..keep {
            for j in 0..keep {
                m[i][j] += feat[i] * feat[j];
            }
            m[i][keep] += feat[i] * y;
        }
    }
    // gaussian elimination with partial pivoting on the augmented system
    for col in 0..keep {
        let pivot =
            (col..keep).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[pivot][col].abs() < 1e-8 {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col];
        for j in col..=keep {
            m[col][j] /= p;
        }
        for row in 0..keep {
            if row != col && m[row][col].abs() > 0.0 {
                let f = m[row][col];
                for j in col..=keep {
                    m[row][j] -= f * m[col][j];
                }
            }
        }
    }
    let mut coef = vec![0.0; 4];
    for i in 0..keep {
        coef[i] = m[i][keep];
    }
    let rss: f64 = data
        .iter()
        .map(|(feat, y)| {
            let pred: f64 = (0..keep).map(|i| coef[i] * feat[i]).sum();
            (y - pred) * (y - pred)
        })
        .sum();
    Some((coef, rss))
}

/// Natural log of `|r|` for a big rational, safe far beyond f64 range.
fn ln_rat_abs(r: &Rat) -> f64 {
    ln_big_abs(r.numer()) - ln_big_abs(r.denom())
}

fn ln_big_abs(x: &Int) -> f64 {
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 52 {
        return mag.to_f64().unwrap().ln();
    }
    let shift = (bits - 52) as usize;
    let top = mag >> shift;
    top.to_f64().unwrap().ln() + (shift as f64) * std::f64::consts::LN_2
}

fn ln_factorial_int(a: &Int) -> f64 {
    let n = a.to_u64().unwrap_or(0);
    (2..=n).map(|j| (j as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn ejem1() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 0, 3], vec![0, 2, 1]])
    }

    fn gap2x3() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 0, 3], vec![0, 1, -1]])
    }

    fn nonpointed() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 0, -3, 2], vec![-1, 1, -2, 2]])
    }

    #[test]
    fn nsupp_examples() {
        assert_eq!(nsupp(&[rat_int(-1), rat(1, 2), rat_int(-3)]), vec![0, 2]);
        assert!(nsupp(&[rat_int(1), rat(3, 4)]).is_empty());
        assert_eq!(nsupp(&[rat(-1, 2), rat_int(-2), rat_int(0)]), vec![1]);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&rat_int(5), 2), rat_int(20));
        assert_eq!(pochhammer(&rat(999, 7), 0), rat_int(1));
        assert_eq!(pochhammer(&rat(1, 2), 3), rat(3, 8));
    }

    #[test]
    fn class_representatives_of_ejem1() {
        let reps = lambda_class_representatives(&ejem1(), &[0, 1]).unwrap();
        assert_eq!(reps, vec![vec![Int::from(0)], vec![Int::from(1)]]);
    }

    #[test]
    fn series_terms_match_the_closed_form() {
        // base k = 0 at β = (1/2, 1/3): term m has exponent
        // (1/2 − 6m, 1/6 − m, 2m) and coefficient [1/2]_{6m}[1/6]_m/(2m)!
        let beta = vec![rat(1, 2), rat(1, 3)];
        let s = gamma_series_truncated(&ejem1(), &[0, 1], &beta, &[Int::zero()], 8).unwrap();
        assert_eq!(s.terms.len(), 5); // t = 0, 2, 4, 6, 8
        for (m, term) in s.terms.iter().enumerate() {
            let m_int = m as i64;
            assert_eq!(term.exponent[0], rat(1, 2) - rat_int(6 * m_int));
            assert_eq!(term.exponent[1], rat(1, 6) - rat_int(m_int));
            assert_eq!(term.exponent[2], rat_int(2 * m_int));
            // independent direct product oracle
            let mut expect = pochhammer(&rat(1, 2), 6 * m as u64);
            expect *= pochhammer(&rat(1, 6), m as u64);
            let mut fact = Rat::one();
            for j in 1..=(2 * m as u64) {
                fact *= Rat::from_integer(Int::from(j));
            }
            assert_eq!(term.coeff, expect / fact);
        }
        assert_eq!(s.terms[0].coeff, Rat::one());
        assert_eq!(s.gevrey.order, rat(7, 2));
    }

    #[test]
    fn one_variable_ratio_recurrence_oracle() {
        // independent route: advance c by [v]_{u_-}/[v+u]_{u_+} per step of
        // the single kernel generator u = (-6, -1, 2)
        let beta = vec![rat(1, 2), rat(1, 3)];
        let a = ejem1();
        let s = gamma_series_truncated(&a, &[0, 1], &beta, &[Int::zero()], 12).unwrap();
        let u: Vec<Rat> = vec![rat_int(-6), rat_int(-1), rat_int(2)];
        let mut c = Rat::one();
        let mut v = s.base.v.clone();
        for (j, term) in s.terms.iter().enumerate() {
            assert_eq!(term.coeff, c, "term {j} disagrees with the recurrence");
            let v_next: Vec<Rat> = v.iter().zip(&u).map(|(x, y)| x + y).collect();
            let num = pochhammer(&v[0], 6) * pochhammer(&v[1], 1);
            let den = pochhammer(&v_next[2], 2);
            c *= num / den;
            v = v_next;
        }
    }

    #[test]
    fn disjoint_supports_partition_the_box() {
        let beta = vec![rat(1, 2), rat(1, 3)];
        let a = ejem1();
        let s0 = gamma_series_truncated(&a, &[0, 1], &beta, &[Int::zero()], 9).unwrap();
        let s1 = gamma_series_truncated(&a, &[0, 1], &beta, &[Int::one()], 9).unwrap();
        let t0: std::collections::BTreeSet<Vec<Int>> =
            s0.terms.iter().map(|t| t.shift.clone()).collect();
        let t1: std::collections::BTreeSet<Vec<Int>> =
            s1.terms.iter().map(|t| t.shift.clone()).collect();
        assert!(t0.is_disjoint(&t1));
        assert_eq!(t0.len() + t1.len(), 10); // all shifts 0..=9
    }

    #[test]
    fn euler_operators_annihilate_term_by_term() {
        let beta = vec![rat(1, 2), rat(1, 3)];
        let a = ejem1();
        let s = gamma_series_truncated(&a, &[0, 1], &beta, &[Int::zero()], 10).unwrap();
        for row in 0..2 {
            let op = OperatorSpec::euler(&a, &beta, row).unwrap();
            let out = apply_operator(&s, &op);
            assert!(out.reliable.is_empty());
            assert!(out.tail.is_empty());
        }
    }

    #[test]
    fn toric_operator_annihilates_the_reliable_region() {
        let beta = vec![rat(1, 2), rat(1, 3)];
        let a = ejem1();
        let s = gamma_series_truncated(&a, &[0, 1], &beta, &[Int::zero()], 20).unwrap();
        let u = vec![Int::from(6), Int::from(1), Int::from(-2)];
        let op = OperatorSpec::toric(&a, u).unwrap();
        let out = apply_operator(&s, &op);
        assert!(out.annihilated_on_reliable(), "reliable region must vanish");
        assert!(!out.tail.is_empty(), "truncation artifacts expected beyond");
        assert_eq!(out.reliable_degree, 13);
    }

    #[test]
    fn toric_operator_detects_non_minimal_base() {
        // β = (3, −1): k = 0 has nsupp {2}, not minimal (k = 1 is empty)
        let a = gap2x3();
        let beta = vec![rat_int(3), rat_int(-1)];
        let s = gamma_series_truncated(&a, &[0, 1], &beta, &[Int::zero()], 12).unwrap();
        let u = vec![Int::from(-3), Int::from(1), Int::from(1)];
        let op = OperatorSpec::toric(&a, u).unwrap();
        let out = apply_operator(&s, &op);
        assert!(!out.annihilated_on_reliable());
    }

    #[test]
    fn minimal_support_shift_of_the_codim_two_example() {
        let a = gap2x3();
        // β = (3, −1): minimal shift is k = 1 with empty support
        let rep = minimal_negative_support_rep(
            &a,
            &[0, 1],
            &[rat_int(3), rat_int(-1)],
            &[Int::zero()],
            20,
        )
        .unwrap();
        assert_eq!(rep.k, vec![Int::from(1)]);
        assert!(rep.nsupp.is_empty());
        assert!(rep.certified);

        // β = (0, −2): k = 0 keeps support {2}; the competing support {1}
        // appears at k = 2, and neither contains the other
        let rep = minimal_negative_support_rep(
            &a,
            &[0, 1],
            &[rat_int(0), rat_int(-2)],
            &[Int::zero()],
            20,
        )
        .unwrap();
        assert_eq!(rep.k, vec![Int::from(0)]);
        assert_eq!(rep.nsupp, vec![1]);
        assert!(rep.certified);

        // along Y = {x_2 = x_3 = 0} the exponent of x_2 must land in N, so
        // the shift moves to k = 2 where β_2 + k = 0
        let rep = minimal_negative_support_rep_along(
            &a,
            &[0, 1],
            &[rat_int(0), rat_int(-2)],
            &[Int::zero()],
            20,
            &[0],
        )
        .unwrap();
        assert_eq!(rep.k, vec![Int::from(2)]);
        assert_eq!(rep.nsupp, vec![0]);
        assert!(rep.certified);
    }

    #[test]
    fn very_generic_beta_keeps_its_representative() {
        let rep = minimal_negative_support_rep(
            &ejem1(),
            &[0, 1],
            &[rat(1, 2), rat(1, 3)],
            &[Int::zero()],
            15,
        )
        .unwrap();
        assert_eq!(rep.k, vec![Int::zero()]);
        assert!(rep.nsupp.is_empty());
        assert!(rep.certified);
    }

    #[test]
    fn multiorder_examples() {
        let g = gevrey_multiorder(&ejem1(), &[0, 1], &[0, 1]).unwrap();
        assert_eq!(g.multiorder, vec![(2, rat(7, 2))]);
        assert_eq!(g.order, rat(7, 2));

        let a = nonpointed();
        let g = gevrey_multiorder(&a, &[2, 3], &[0, 1, 2, 3]).unwrap();
        let s2 = g.multiorder.iter().find(|(j, _)| *j == 1).unwrap();
        assert_eq!(s2.1, rat(5, 2));
        let g = gevrey_multiorder(&a, &[0, 1], &[0, 1, 2]).unwrap();
        let s4 = g.multiorder.iter().find(|(j, _)| *j == 3).unwrap();
        assert_eq!(s4.1, rat_int(6));
        assert_eq!(g.order, rat_int(6));

        let id = IntMatrix::identity(3);
        let g = gevrey_multiorder(&id, &[0, 1, 2], &[0, 1, 2]).unwrap();
        assert!(g.multiorder.is_empty());
        assert_eq!(g.order, rat_int(1));
    }

    #[test]
    fn multiorder_matches_covector_incidence() {
        // s_i is the unique rational with a_i/s_i on H_sigma: check against
        // the geometry module covector of the facet through sigma
        let a = ejem1();
        let g = gevrey_multiorder(&a, &[0, 1], &[0, 1]).unwrap();
        let (_, s3) = &g.multiorder[0];
        let w = crate::geometry::WeightVector::explicit(vec![rat_int(1), rat_int(1), s3.clone()])
            .unwrap();
        let u = crate::geometry::umbrella(&a, &w).unwrap();
        assert!(u.facet_sets(2).contains(&vec![0, 1, 2]));
    }

    #[test]
    fn eta_partition_of_ejem1_at_zero_beta() {
        // on the even class the σ-part is (−6m, −m): η grows to {1,2}
        let classes = eta_partition(
            &ejem1(),
            &[0, 1],
            &[rat_int(0), rat_int(0)],
            &[Int::zero()],
            16,
        )
        .unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].eta, Vec::<usize>::new());
        assert_eq!(classes[0].points, vec![vec![Int::zero()]]);
        assert!(!classes[0].unbounded);
        assert_eq!(classes[1].eta, vec![0, 1]);
        assert!(classes[1].unbounded);
    }

    #[test]
    fn eta_partition_is_trivial_for_very_generic_beta() {
        let classes = eta_partition(
            &ejem1(),
            &[0, 1],
            &[rat(1, 2), rat(1, 3)],
            &[Int::zero()],
            12,
        )
        .unwrap();
        assert_eq!(classes.len(), 1);
        assert!(classes[0].eta.is_empty());
        assert!(classes[0].unbounded);
    }

    #[test]
    fn phi_k_eta_pieces_partition_the_class() {
        let a = gap2x3();
        let beta = vec![rat_int(3), rat_int(-1)];
        let classes = eta_partition(&a, &[0, 1], &beta, &[Int::zero()], 10).unwrap();
        assert!(classes.len() > 1);
        let mut covered: std::collections::BTreeSet<Vec<Int>> = Default::default();
        let mut total = 0;
        for class in &classes {
            let s = phi_k_eta(&a, &[0, 1], &beta, &[Int::zero()], &class.eta, 10).unwrap();
            for t in &s.terms {
                assert!(covered.insert(t.shift.clone()), "supports overlap");
                total += 1;
            }
        }
        assert_eq!(total, 11); // all shifts 0..=10 of the single class
    }

    #[test]
    fn phi_k_eta_of_a_singleton_partition_is_the_full_series() {
        let beta = vec![rat(1, 2), rat(1, 3)];
        let a = ejem1();
        let full = gamma_series_truncated(&a, &[0, 1], &beta, &[Int::zero()], 10).unwrap();
        let piece = phi_k_eta(&a, &[0, 1], &beta, &[Int::zero()], &[], 10).unwrap();
        assert_eq!(full.terms.len(), piece.terms.len());
        for (x, y) in full.terms.iter().zip(&piece.terms) {
            assert_eq!(x.coeff, y.coeff);
            assert_eq!(x.exponent, y.exponent);
        }
    }

    #[test]
    fn select_eta_prefers_the_growing_class() {
        let (eta, rule) = select_eta(
            &ejem1(),
            &[0, 1],
            &[rat_int(0), rat_int(0)],
            &[Int::zero()],
            16,
        )
        .unwrap();
        assert_eq!(eta, vec![0, 1]);
        assert_eq!(rule, SelectionRule::ExactGrowth);
    }

    #[test]
    fn index_regression_recovers_the_order() {
        let beta = vec![rat(1, 2), rat(1, 3)];
        // 60 nonzero terms: shifts t = 2m up to m = 59 → N = 118
        let s = gamma_series_truncated(&ejem1(), &[0, 1], &beta, &[Int::zero()], 118).unwrap();
        assert_eq!(s.terms.len(), 60);
        let est = gevrey_index_estimate(&s, &[0, 1]).unwrap();
        assert!(
            (est.s_hat - 3.5).abs() <= 0.15,
            "s_hat = {} residual = {}",
            est.s_hat,
            est.residual
        );
    }

    #[test]
    fn index_regression_rejects_short_series() {
        let beta = vec![rat(1, 2), rat(1, 3)];
        let s = gamma_series_truncated(&ejem1(), &[0, 1], &beta, &[Int::zero()], 8).unwrap();
        assert!(matches!(
            gevrey_index_estimate(&s, &[0, 1]),
            Err(Error::TooFewTerms { .. })
        ));
    }

    #[test]
    fn genericity_tri_state() {
        let a = ejem1();
        assert_eq!(
            beta_genericity(&a, &[0, 1], &[rat(1, 2), rat(1, 3)], 20).unwrap(),
            Genericity::GenericSoFar { bound: 20 }
        );
        match beta_genericity(&a, &[0, 1], &[rat_int(0), rat_int(0)], 20).unwrap() {
            Genericity::Degenerate { shift, .. } => assert_eq!(shift, vec![Int::from(0)]),
            other => panic!("expected a degeneracy witness, got {other:?}"),
        }
    }

    #[test]
    fn single_class_point_gives_a_single_unit_term() {
        // at N = |k| the only class shift in the box is k itself
        let beta = vec![rat(1, 2), rat(1, 3)];
        let s =
            gamma_series_truncated(&ejem1(), &[0, 1], &beta, &[Int::from(1)], 1).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.terms[0].coeff, Rat::one());
    }

    #[test]
    fn truncation_below_base_degree_is_rejected() {
        let beta = vec![rat(1, 2), rat(1, 3)];
        let err = gamma_series_truncated(&ejem1(), &[0, 1], &beta, &[Int::from(5)], 3);
        assert!(matches!(err, Err(Error::InvalidInput { .. })));
    }
}
