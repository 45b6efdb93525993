//! Deterministic random corpora and independent oracles shared by the
//! acceptance suite. The enumeration and Pochhammer routines here are
//! deliberately written from scratch so the suite never checks the library
//! against itself.

use gkz::exact::{Int, Rat};
use gkz::IntMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random full-rank d×n integer matrices with d ≤ 3, d ≤ n ≤ 6 and entries
/// in [−bound, bound].
pub fn random_matrices(count: usize, bound: i64, seed: u64) -> Vec<IntMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let d = rng.gen_range(1..=3usize);
        let n = rng.gen_range(d..=6usize);
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows);
        if m.rank() == d {
            out.push(m);
        }
    }
    out
}

/// All integer points of the box `[0, per_coord]^m`, odometer order.
pub fn box_points(m: usize, per_coord: u64) -> Vec<Vec<Int>> {
    let mut out = Vec::new();
    let mut k = vec![0u64; m];
    loop {
        out.push(k.iter().map(|&x| Int::from(x)).collect());
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            k[pos] += 1;
            if k[pos] <= per_coord {
                break;
            }
            k[pos] = 0;
        }
    }
}

/// A random rational parameter vector certified generic for the given
/// simplices: all denominators are a prime `q` coprime to every
/// `det A_σ`, and the check below confirms `q` survives in every
/// coordinate of `A_σ^{-1}β`. Since the shift part of any exponent has
/// denominator dividing `det A_σ`, no coordinate of any `v^t` is ever an
/// integer, for any shift at all.
pub fn generic_beta(
    a: &IntMatrix,
    simplices: &[Vec<usize>],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Rat>> {
    use num_integer::Integer as _;
    const PRIMES: [i64; 12] = [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 347];
    let dets: Vec<Int> = simplices
        .iter()
        .map(|sigma| a.submatrix_cols(sigma).det())
        .collect();
    let q = Int::from(
        *PRIMES
            .iter()
            .find(|&&p| dets.iter().all(|d| !(d % Int::from(p)).is_zero()))?,
    );
    'attempt: for _ in 0..60 {
        let beta: Vec<Rat> = (0..a.rows())
            .map(|_| {
                let mut p = rng.gen_range(-200..=200i64);
                if (Int::from(p) % &q).is_zero() {
                    p += 1;
                }
                Rat::new(Int::from(p), q.clone())
            })
            .collect();
        for sigma in simplices {
            let Ok(inv) = a.submatrix_cols(sigma).to_q().inverse() else {
                return None;
            };
            let image = inv.matvec(&beta);
            if image.iter().any(|x| !x.denom().is_multiple_of(&q)) {
                continue 'attempt;
            }
        }
        return Some(beta);
    }
    None
}

/// Independent Pochhammer oracle: `[p/q]_m` as one integer product over a
/// power of the denominator, never through the library's falling-factorial
/// loop.
pub fn oracle_pochhammer(v: &Rat, m: u64) -> Rat {
    let p = v.numer().clone();
    let q = v.denom().clone();
    let mut num = Int::from(1);
    for j in 0..m {
        num *= &p - Int::from(j) * &q;
    }
    let mut den = Int::from(1);
    for _ in 0..m {
        den *= &q;
    }
    Rat::new(num, den)
}

/// Exact 2D convex-hull area oracle: `2 · area(conv(points ∪ {0}))` by the
/// shoelace formula over a monotone-chain hull.
pub fn shoelace_double_area(points: &[(Rat, Rat)]) -> Rat {
    let zero = Rat::new(Int::from(0), Int::from(1));
    let mut pts: Vec<(Rat, Rat)> = points.to_vec();
    pts.push((zero.clone(), zero.clone()));
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return zero;
    }
    let cross = |o: &(Rat, Rat), a: &(Rat, Rat), b: &(Rat, Rat)| -> Rat {
        (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
    };
    let chain = |iter: &mut dyn Iterator<Item = &(Rat, Rat)>| -> Vec<(Rat, Rat)> {
        let mut half: Vec<(Rat, Rat)> = Vec::new();
        for p in iter {
            while half.len() >= 2 {
                let sign = cross(&half[half.len() - 2], &half[half.len() - 1], p);
                if sign <= zero {
                    half.pop();
                } else {
                    break;
                }
            }
            half.push(p.clone());
        }
        half
    };
    let mut lower = chain(&mut pts.iter());
    let mut upper = chain(&mut pts.iter().rev());
    lower.pop();
    upper.pop();
    let mut hull = lower;
    hull.extend(upper);
    let mut doubled = zero.clone();
    for i in 0..hull.len() {
        let (x1, y1) = &hull[i];
        let (x2, y2) = &hull[(i + 1) % hull.len()];
        doubled += x1 * y2 - x2 * y1;
    }
    if doubled < zero {
        -doubled
    } else {
        doubled
    }
}
