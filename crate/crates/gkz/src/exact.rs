//! Exact integer and rational linear algebra.
//!
//! Everything downstream (umbrellas, triangulations, series) is built on the
//! primitives in this module: arbitrary-precision matrices, Smith and Hermite
//! normal forms, saturated kernel lattices, lattice indices, and the finite
//! quotient groups `ZA / Zσ` whose representatives index the series classes.
//!
//! All arithmetic is exact. Rationals are kept in canonical reduced form
//! (positive denominator) by `num-rational`; they serialize as `"p/q"`, or
//! `"p"` when the denominator is one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Parse a rational from `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    s.trim().parse::<Rat>().map_err(|e| Error::InvalidInput {
        field: "rational".into(),
        reason: format!("cannot parse {s:?}: {e}"),
    })
}

/// Canonical string form: `"p/q"` with q > 0 and gcd(p, q) = 1, or `"p"`.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Coordinate sum `|v| = Σ v_i`.
pub fn coord_sum(v: &[Rat]) -> Rat {
    v.iter().fold(Rat::zero(), |acc, x| acc + x)
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c));
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| Int::from(x)).collect(),
        }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c));
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Submatrix formed by the columns in `cols` (0-based), in the given order.
    pub fn submatrix_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zero(self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut m = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += prod;
                }
            }
        }
        m
    }

    pub fn matvec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Int::zero(), |acc, j| acc + &self[(i, j)] * &v[j]))
            .collect()
    }

    pub fn to_q(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| Rat::from_integer(x.clone()))
                .collect(),
        }
    }

    /// Determinant of a square matrix by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a: Vec<Vec<Int>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero());
                    a[i][j] = q;
                }
                a[i][k] = Int::zero();
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.to_q().rank()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c));
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut m = QMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += prod;
                }
            }
        }
        m
    }

    pub fn matvec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Rat::zero(), |acc, j| acc + &self[(i, j)] * &v[j]))
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Rat>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for j in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&i| !a[i][j].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let pivot = a[rank][j].clone();
            for i in 0..self.rows {
                if i != rank && !a[i][j].is_zero() {
                    let factor = &a[i][j] / &pivot;
                    for jj in j..self.cols {
                        let sub = &factor * &a[rank][jj];
                        a[i][jj] -= sub;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        for j in 0..n {
            let Some(p) = (j..n).find(|&i| !a[i][j].is_zero()) else {
                return Err(Error::SingularMatrix);
            };
            a.swap(j, p);
            inv.swap(j, p);
            let pivot = a[j][j].clone();
            for jj in 0..n {
                a[j][jj] /= &pivot;
                inv[j][jj] /= &pivot;
            }
            for i in 0..n {
                if i != j && !a[i][j].is_zero() {
                    let factor = a[i][j].clone();
                    for jj in 0..n {
                        let s = &factor * &a[j][jj];
                        a[i][jj] -= s;
                        let s = &factor * &inv[j][jj];
                        inv[i][jj] -= s;
                    }
                }
            }
        }
        Ok(QMatrix::from_rows(inv))
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact inverse of a square rational matrix.
pub fn rational_inverse(m: &QMatrix) -> Result<QMatrix> {
    m.inverse()
}

/// Smith normal form `U·M·V = diag(d_1, ..., d_r)` with `d_i | d_{i+1}`
/// and `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub diag: Vec<Int>,
}

impl SmithDecomposition {
    /// Nonzero elementary divisors.
    pub fn elementary_divisors(&self) -> Vec<Int> {
        self.diag.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

/// Smith normal form with a smallest-absolute-value pivot strategy.
///
/// The transforms are re-multiplied at the end; the strategy only bounds
/// coefficient growth, it is not what correctness rests on.
pub fn smith(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Int>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let add_row = |a: &mut Vec<Vec<Int>>, u: &mut IntMatrix, dst: usize, src: usize, q: &Int| {
        for j in 0..cols {
            let s = q * &a[src][j];
            a[dst][j] -= s;
        }
        for j in 0..rows {
            let s = q * &u[(src, j)];
            u[(dst, j)] -= s;
        }
    };
    let add_col = |a: &mut Vec<Vec<Int>>, v: &mut IntMatrix, dst: usize, src: usize, q: &Int| {
        for row in a.iter_mut() {
            let s = q * &row[src];
            row[dst] -= s;
        }
        for i in 0..cols {
            let s = q * &v[(i, src)];
            v[(i, dst)] -= s;
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            a.swap(pi, t);
            for j in 0..rows {
                let tmp = u[(pi, j)].clone();
                u[(pi, j)] = u[(t, j)].clone();
                u[(t, j)] = tmp;
            }
        }
        if pj != t {
            for row in a.iter_mut() {
                row.swap(pj, t);
            }
            for i in 0..cols {
                let tmp = v[(i, pj)].clone();
                v[(i, pj)] = v[(i, t)].clone();
                v[(i, t)] = tmp;
            }
        }

        let mut clean = true;
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                let (q, r) = a[i][t].div_rem(&a[t][t]);
                add_row(&mut a, &mut u, i, t, &q);
                if !r.is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                let (q, r) = a[t][j].div_rem(&a[t][t]);
                add_col(&mut a, &mut v, j, t, &q);
                if !r.is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // smaller remainders exist; re-pick the pivot
        }

        // pivot must divide the whole trailing block
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
        if let Some((i, _)) = bad {
            let minus_one = -Int::one();
            add_row(&mut a, &mut u, t, i, &minus_one); // mix row i into row t
            continue;
        }

        if a[t][t].is_negative() {
            for j in 0..cols {
                a[t][j] = -a[t][j].clone();
            }
            for j in 0..rows {
                u[(t, j)] = -u[(t, j)].clone();
            }
        }
        t += 1;
    }

    let diag: Vec<Int> = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();

    // re-multiply to assert the decomposition
    let product = u.mul(m).mul(&v);
    for i in 0..rows {
        for j in 0..cols {
            let expected = if i == j && i < diag.len() {
                diag[i].clone()
            } else {
                Int::zero()
            };
            assert_eq!(product[(i, j)], expected, "smith decomposition mismatch");
        }
    }
    assert!(u.det().abs().is_one(), "left transform not unimodular");
    assert!(v.det().abs().is_one(), "right transform not unimodular");

    SmithDecomposition {
        left: u,
        right: v,
        diag,
    }
}

/// Row-style Hermite normal form: canonical basis for the row lattice.
///
/// Pivots are positive, entries above a pivot are reduced into `[0, pivot)`,
/// and zero rows are dropped.
pub fn hnf_rows(m: &IntMatrix) -> IntMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Int>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        // euclid the column entries below r into a single pivot
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !a[i][j].is_zero() && best.map(|b| a[i][j].abs() < a[b][j].abs()).unwrap_or(true)
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut any = false;
            for i in r + 1..rows {
                if !a[i][j].is_zero() {
                    let q = div_round(&a[i][j], &a[r][j]);
                    for jj in 0..cols {
                        let s = &q * &a[r][jj];
                        a[i][jj] -= s;
                    }
                    any = any || !a[i][j].is_zero();
                }
            }
            if !any {
                break;
            }
        }
        if a[r][j].is_zero() {
            continue;
        }
        if a[r][j].is_negative() {
            for jj in 0..cols {
                a[r][jj] = -a[r][jj].clone();
            }
        }
        for i in 0..r {
            if !a[i][j].is_zero() {
                let q = a[i][j].div_floor(&a[r][j]);
                for jj in 0..cols {
                    let s = &q * &a[r][jj];
                    a[i][jj] -= s;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    IntMatrix::from_bigint_rows(a)
}

fn div_round(a: &Int, b: &Int) -> Int {
    // nearest-integer quotient, keeps remainders at most |b|/2
    let two = Int::from(2);
    let (q, r) = a.div_rem(b);
    if &r.abs() * &two > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + Int::one()
        } else {
            q - Int::one()
        }
    } else {
        q
    }
}

/// Z-basis of the saturated kernel lattice `L_A = ker(A) ∩ Z^n`.
///
/// The basis is canonical (rows of the Hermite normal form of the raw
/// Smith-form kernel block), has `n − d` elements, and spans a saturated
/// sublattice: all elementary divisors of the basis matrix are 1.
pub fn kernel_basis(a: &IntMatrix) -> Result<Vec<Vec<Int>>> {
    let rank = a.rank();
    if rank < a.rows() {
        return Err(Error::NotFullRank {
            rank,
            expected: a.rows(),
        });
    }
    Ok(kernel_basis_any(a))
}

/// Kernel basis without the full-rank precondition (used for facet-restricted
/// kernels, which are often rank-deficient).
pub fn kernel_basis_any(a: &IntMatrix) -> Vec<Vec<Int>> {
    let s = smith(a);
    let r = s.rank();
    let n = a.cols();
    let raw: Vec<Vec<Int>> = (r..n).map(|j| s.right.col(j)).collect();
    if raw.is_empty() {
        return raw;
    }
    let h = hnf_rows(&IntMatrix::from_bigint_rows(raw));
    (0..h.rows()).map(|i| h.row(i).to_vec()).collect()
}

/// The index `[Z^d : ZA]`, i.e. the product of the elementary divisors.
pub fn lattice_index_full(a: &IntMatrix) -> Result<Int> {
    let s = smith(a);
    if s.rank() < a.rows() {
        return Err(Error::InfiniteIndex {
            rank: s.rank(),
            expected: a.rows(),
        });
    }
    Ok(s.elementary_divisors()
        .iter()
        .fold(Int::one(), |acc, d| acc * d))
}

/// The kernel block `B_σ`: the n×(n−d) rational matrix whose columns span
/// `ker(A)`, with the rows indexed by `σ̄` forming the identity and the rows
/// indexed by `σ` holding `−A_σ^{-1}·A_σ̄`.
pub fn kernel_block(a: &IntMatrix, sigma: &[usize]) -> Result<QMatrix> {
    let d = a.rows();
    let n = a.cols();
    if sigma.len() != d {
        return Err(Error::NotASimplex {
            columns: sigma.iter().map(|&i| i + 1).collect(),
        });
    }
    let complement: Vec<usize> = (0..n).filter(|j| !sigma.contains(j)).collect();
    let inv = a
        .submatrix_cols(sigma)
        .to_q()
        .inverse()
        .map_err(|_| Error::NotASimplex {
            columns: sigma.iter().map(|&i| i + 1).collect(),
        })?;
    let ratio = inv.mul(&a.submatrix_cols(&complement).to_q());
    let mut b = QMatrix::zero(n, complement.len());
    for (pos, &i) in sigma.iter().enumerate() {
        for j in 0..complement.len() {
            b[(i, j)] = -ratio[(pos, j)].clone();
        }
    }
    for (pos, &i) in complement.iter().enumerate() {
        b[(i, pos)] = Rat::one();
    }
    Ok(b)
}

/// The finite quotient group `ZA / Zσ` for a simplex `σ`.
///
/// Representatives are realized as shift vectors `k ∈ N^{n−d}` (indexed by
/// the columns outside `σ`), each lexicographically smallest in its class.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    pub ambient: IntMatrix,
    pub sublattice: IntMatrix,
    pub order: usize,
    pub representatives: Vec<Vec<Int>>,
    /// `A_σ^{-1}·A_σ̄`; two shifts are congruent iff this maps their
    /// difference into `Z^d`.
    ratio: QMatrix,
}

impl LatticeQuotient {
    /// Fractional-part signature of the class of `k`; equal signatures mean
    /// equal classes.
    pub fn class_signature(&self, k: &[Int]) -> Vec<Rat> {
        let kq: Vec<Rat> = k.iter().map(|x| Rat::from_integer(x.clone())).collect();
        self.ratio
            .matvec(&kq)
            .into_iter()
            .map(|x| {
                let fl = x.floor();
                x - fl
            })
            .collect()
    }

    /// Whether `k` and `k2` lie in the same class of `ZA / Zσ`.
    pub fn same_class(&self, k: &[Int], k2: &[Int]) -> bool {
        let diff: Vec<Rat> = k
            .iter()
            .zip(k2)
            .map(|(a, b)| Rat::from_integer(a - b))
            .collect();
        self.ratio.matvec(&diff).iter().all(|x| x.is_integer())
    }

    /// Index of the representative whose class contains `k`.
    pub fn class_index(&self, k: &[Int]) -> usize {
        self.representatives
            .iter()
            .position(|rep| self.same_class(rep, k))
            .expect("every shift lies in some class")
    }
}

/// Compute `ZA / Zσ` with its lex-least shift representatives.
pub fn quotient_group(a: &IntMatrix, sigma: &[usize]) -> Result<LatticeQuotient> {
    let d = a.rows();
    if sigma.len() != d {
        return Err(Error::NotASimplex {
            columns: sigma.iter().map(|&i| i + 1).collect(),
        });
    }
    let a_sigma = a.submatrix_cols(sigma);
    let det = a_sigma.det();
    if det.is_zero() {
        return Err(Error::NotASimplex {
            columns: sigma.iter().map(|&i| i + 1).collect(),
        });
    }
    let index = lattice_index_full(a)?;
    let (order_big, rem) = det.abs().div_rem(&index);
    assert!(rem.is_zero(), "index must divide |det A_sigma|");
    let order: usize = order_big
        .try_into()
        .map_err(|_| Error::Internal("quotient order does not fit usize".into()))?;

    let complement: Vec<usize> = (0..a.cols()).filter(|j| !sigma.contains(j)).collect();
    let a_bar = a.submatrix_cols(&complement);
    let inv = a_sigma.to_q().inverse()?;
    let ratio = inv.mul(&a_bar.to_q());

    let m = complement.len();
    let mut reps: Vec<Vec<Int>> = Vec::with_capacity(order);
    let mut seen: std::collections::BTreeSet<Vec<Rat>> = std::collections::BTreeSet::new();

    if m == 0 {
        assert_eq!(order, 1);
        reps.push(Vec::new());
    } else {
        // per-coordinate bound: the order of the class of column i
        let bounds: Vec<u64> = (0..m)
            .map(|i| {
                ratio
                    .col(i)
                    .iter()
                    .fold(Int::one(), |acc, x| acc.lcm(x.denom()))
                    .try_into()
                    .unwrap_or(u64::MAX)
            })
            .collect();
        let mut k = vec![0u64; m];
        'sweep: loop {
            let kv: Vec<Int> = k.iter().map(|&x| Int::from(x)).collect();
            let sig = {
                let kq: Vec<Rat> = kv.iter().map(|x| Rat::from_integer(x.clone())).collect();
                ratio
                    .matvec(&kq)
                    .into_iter()
                    .map(|x| {
                        let fl = x.floor();
                        x - fl
                    })
                    .collect::<Vec<Rat>>()
            };
            if seen.insert(sig) {
                reps.push(kv);
                if reps.len() == order {
                    break;
                }
            }
            // odometer in lex order: last coordinate fastest
            let mut pos = m;
            loop {
                if pos == 0 {
                    break 'sweep;
                }
                pos -= 1;
                k[pos] += 1;
                if k[pos] < bounds[pos] {
                    break;
                }
                k[pos] = 0;
            }
        }
        assert_eq!(
            reps.len(),
            order,
            "class sweep must discover exactly [ZA : Zsigma] classes"
        );
    }

    Ok(LatticeQuotient {
        ambient: a.clone(),
        sublattice: a_sigma,
        order,
        representatives: reps,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ejem1() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 0, 3], vec![0, 2, 1]])
    }

    fn nonpointed() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 0, -3, 2], vec![-1, 1, -2, 2]])
    }

    #[test]
    fn kernel_of_ejem1_is_the_expected_generator() {
        let basis = kernel_basis(&ejem1()).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![Int::from(6), Int::from(1), Int::from(-2)]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let a = IntMatrix::identity(3);
        assert!(kernel_basis(&a).unwrap().is_empty());
    }

    #[test]
    fn kernel_of_row_of_ones() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 1]]);
        let basis = kernel_basis(&a).unwrap();
        assert_eq!(basis.len(), 2);
        for u in &basis {
            let prod = a.matvec(u);
            assert!(prod.iter().all(|x| x.is_zero()));
        }
        // saturation: elementary divisors of the basis matrix are all 1
        let m = IntMatrix::from_bigint_rows(basis);
        let divs = smith(&m).elementary_divisors();
        assert!(divs.iter().all(|d| d.is_one()));
    }

    #[test]
    fn kernel_rejects_rank_deficient_input() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(matches!(
            kernel_basis(&a),
            Err(Error::NotFullRank {
                rank: 1,
                expected: 2
            })
        ));
    }

    #[test]
    fn lattice_index_examples() {
        assert_eq!(lattice_index_full(&ejem1()).unwrap(), Int::from(1));
        let twice_id = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(lattice_index_full(&twice_id).unwrap(), Int::from(4));
        let row = IntMatrix::from_rows(&[vec![2, 4]]);
        assert_eq!(lattice_index_full(&row).unwrap(), Int::from(2));
    }

    #[test]
    fn quotient_group_orders() {
        let q = quotient_group(&ejem1(), &[0, 1]).unwrap();
        assert_eq!(q.order, 2);
        assert_eq!(
            q.representatives,
            vec![vec![Int::from(0)], vec![Int::from(1)]]
        );

        // simplex with |det| equal to the full index has trivial quotient
        let a = IntMatrix::from_rows(&[vec![2, 0, 2], vec![0, 2, 2]]);
        let q = quotient_group(&a, &[0, 1]).unwrap();
        assert_eq!(q.order, 1);

        let q = quotient_group(&nonpointed(), &[2, 3]).unwrap();
        assert_eq!(q.order, 2);
        assert_eq!(
            q.representatives,
            vec![
                vec![Int::from(0), Int::from(0)],
                vec![Int::from(0), Int::from(1)]
            ]
        );
    }

    #[test]
    fn quotient_rejects_singular_sigma() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 1]]);
        assert!(matches!(
            quotient_group(&a, &[0, 1]),
            Err(Error::NotASimplex { .. })
        ));
    }

    #[test]
    fn rational_inverse_examples() {
        let id = QMatrix::identity(3);
        assert_eq!(rational_inverse(&id).unwrap(), id);

        let m = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(2)],
        ]);
        let inv = rational_inverse(&m).unwrap();
        assert_eq!(inv[(1, 1)], rat(1, 2));

        // A_{34} of the non-pointed 2x4 configuration
        let m = QMatrix::from_rows(vec![
            vec![rat_int(-3), rat_int(2)],
            vec![rat_int(-2), rat_int(2)],
        ]);
        let inv = rational_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
        assert_eq!(inv[(0, 0)], rat_int(-1));
        assert_eq!(inv[(1, 1)], rat(3, 2));

        let sing = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ]);
        assert!(rational_inverse(&sing).is_err());
    }

    #[test]
    fn index_times_simplex_volume_is_det() {
        // [Z^d : ZA] * vol_{ZA}(Delta_sigma) = |det A_sigma|
        let cases = vec![
            (ejem1(), vec![0, 1]),
            (ejem1(), vec![0, 2]),
            (nonpointed(), vec![2, 3]),
            (nonpointed(), vec![0, 1]),
        ];
        for (a, sigma) in cases {
            let det = a.submatrix_cols(&sigma).det().abs();
            let idx = lattice_index_full(&a).unwrap();
            let q = quotient_group(&a, &sigma).unwrap();
            assert_eq!(Int::from(q.order) * idx, det);
        }
    }

    #[test]
    fn quotient_order_matches_bruteforce_class_count() {
        // count distinct signatures over the box [0, 2|det|]^{n-d}
        for (a, sigma) in [
            (ejem1(), vec![0usize, 1]),
            (nonpointed(), vec![2, 3]),
            (nonpointed(), vec![0, 3]),
        ] {
            let q = quotient_group(&a, &sigma).unwrap();
            let det: u64 = a.submatrix_cols(&sigma).det().abs().try_into().unwrap();
            let m = a.cols() - sigma.len();
            let bound = 2 * det + 1;
            let mut seen = std::collections::BTreeSet::new();
            let mut k = vec![0u64; m];
            loop {
                let kv: Vec<Int> = k.iter().map(|&x| Int::from(x)).collect();
                seen.insert(q.class_signature(&kv));
                let mut pos = m;
                let mut done = true;
                while pos > 0 {
                    pos -= 1;
                    k[pos] += 1;
                    if k[pos] < bound {
                        done = false;
                        break;
                    }
                    k[pos] = 0;
                }
                if done {
                    break;
                }
            }
            assert_eq!(seen.len(), q.order);
        }
    }

    #[test]
    fn smith_diag_divisibility() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let s = smith(&m);
        let divs = s.elementary_divisors();
        for w in divs.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn bareiss_det_matches_cofactor_expansion() {
        let m = IntMatrix::from_rows(&[vec![3, 1, -2], vec![0, 4, 1], vec![5, -1, 2]]);
        // cofactor by hand: 3*(8+1) - 1*(0-5) + (-2)*(0-20) = 27 + 5 + 40
        assert_eq!(m.det(), Int::from(72));
    }

    #[test]
    fn rational_round_trip() {
        for s in ["0", "7", "-3", "1/2", "-22/7", "100000000000000000001/3"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // non-canonical input parses to canonical form
        assert_eq!(format_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }
}
