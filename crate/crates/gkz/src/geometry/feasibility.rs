//! Exact linear feasibility via Fourier–Motzkin elimination, plus candidate
//! ray enumeration for small polyhedral cones.
//!
//! Sizes here are tiny (at most a handful of variables), so elimination with
//! row dedup is entirely adequate.

use num_traits::{Signed, Zero};

use crate::exact::Rat;

/// `⟨coeffs, x⟩ ≤ rhs`, or `< rhs` when `strict`.
#[derive(Clone, Debug)]
pub(crate) struct LinearConstraint {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    pub strict: bool,
}

impl LinearConstraint {
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn le(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        LinearConstraint {
            coeffs,
            rhs,
            strict: false,
        }
    }

    pub fn lt(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        LinearConstraint {
            coeffs,
            rhs,
            strict: true,
        }
    }

    /// `⟨coeffs, x⟩ ≥ rhs` as a `≤` row.
    pub fn ge(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        LinearConstraint {
            coeffs: coeffs.into_iter().map(|c| -c).collect(),
            rhs: -rhs,
            strict: false,
        }
    }

    fn normalized(&self) -> (Vec<Rat>, Rat, bool) {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => (self.coeffs.clone(), self.rhs.clone(), self.strict),
            Some(lead) => {
                let scale = lead.abs();
                (
                    self.coeffs.iter().map(|c| c / &scale).collect(),
                    &self.rhs / &scale,
                    self.strict,
                )
            }
        }
    }
}

/// Rational feasibility of a system of (possibly strict) inequalities.
pub(crate) fn feasible(constraints: &[LinearConstraint], nvars: usize) -> bool {
    let mut rows: Vec<LinearConstraint> = constraints.to_vec();
    for k in (0..nvars).rev() {
        let mut kept: Vec<LinearConstraint> = Vec::new();
        let mut uppers: Vec<LinearConstraint> = Vec::new(); // coeff on x_k > 0
        let mut lowers: Vec<LinearConstraint> = Vec::new(); // coeff on x_k < 0
        for row in rows {
            match row.coeffs[k].cmp(&Rat::zero()) {
                std::cmp::Ordering::Equal => kept.push(row),
                std::cmp::Ordering::Greater => uppers.push(row),
                std::cmp::Ordering::Less => lowers.push(row),
            }
        }
        for up in &uppers {
            for lo in &lowers {
                let lam_up = -lo.coeffs[k].clone(); // > 0
                let lam_lo = up.coeffs[k].clone(); // > 0
                let coeffs: Vec<Rat> = (0..nvars)
                    .map(|j| &lam_up * &up.coeffs[j] + &lam_lo * &lo.coeffs[j])
                    .collect();
                let rhs = &lam_up * &up.rhs + &lam_lo * &lo.rhs;
                kept.push(LinearConstraint {
                    coeffs,
                    rhs,
                    strict: up.strict || lo.strict,
                });
            }
        }
        // dedupe, keeping the stricter of identical rows
        let mut seen: std::collections::BTreeMap<(Vec<Rat>, Rat), bool> = Default::default();
        for row in kept {
            let (c, r, s) = row.normalized();
            let entry = seen.entry((c, r)).or_insert(false);
            *entry = *entry || s;
        }
        rows = seen
            .into_iter()
            .map(|((coeffs, rhs), strict)| LinearConstraint {
                coeffs,
                rhs,
                strict,
            })
            .collect();
    }
    rows.iter().all(|row| {
        debug_assert!(row.coeffs.iter().all(|c| c.is_zero()));
        if row.strict {
            row.rhs.is_positive()
        } else {
            !row.rhs.is_negative()
        }
    })
}

/// Candidate extreme rays of the cone `{z : ⟨row, z⟩ ≤ 0 for every row}`.
///
/// Every extreme ray is tight on some `nvars − 1` of the rows, so the
/// enumeration below is complete; non-extreme survivors are harmless for
/// maximizing a linear functional over the cone. Rays are normalized to
/// coordinate sum one, which is valid for cones inside the nonnegative
/// orthant (pass the `−z_i ≤ 0` rows explicitly).
pub(crate) fn cone_candidate_rays(rows: &[Vec<Rat>], nvars: usize) -> Vec<Vec<Rat>> {
    let satisfies = |z: &[Rat]| {
        rows.iter().all(|row| {
            let v: Rat = row.iter().zip(z).map(|(a, b)| a * b).sum();
            !v.is_positive()
        })
    };
    let mut out: std::collections::BTreeSet<Vec<Rat>> = Default::default();
    if nvars == 0 {
        return Vec::new();
    }
    for subset in super::polytope::combinations(rows.len(), nvars - 1) {
        let sys: Vec<Vec<Rat>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let Some(gen) = one_dim_nullspace(&sys, nvars) else {
            continue;
        };
        for cand in [gen.clone(), gen.iter().map(|x| -x).collect::<Vec<Rat>>()] {
            if satisfies(&cand) {
                let total: Rat = cand.iter().sum();
                if total.is_zero() {
                    continue;
                }
                out.insert(cand.iter().map(|x| x / &total).collect());
            }
        }
    }
    out.into_iter().collect()
}

fn one_dim_nullspace(rows: &[Vec<Rat>], nvars: usize) -> Option<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let k = a.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..nvars {
        if r == k {
            break;
        }
        let Some(p) = (r..k).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for j in 0..nvars {
            a[r][j] /= &pivot;
        }
        for i in 0..k {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..nvars {
                    let s = &factor * &a[r][j];
                    a[i][j] -= s;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if nvars - pivots.len() != 1 {
        return None;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_col = (0..nvars).find(|c| !pivot_cols.contains(c)).unwrap();
    let mut gen = vec![Rat::zero(); nvars];
    gen[free_col] = num_traits::One::one();
    for &(pr, pc) in &pivots {
        gen[pc] = -a[pr][free_col].clone();
    }
    Some(gen)
}
