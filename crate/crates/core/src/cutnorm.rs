//! Cut (rectangle) norm of step kernels.
//!
//! For a step kernel on `m` equal steps,
//! `‖X‖_□ = max_{S,T ⊆ [m]} |Σ_{i∈S, j∈T} X_ij| / m²`: the supremum over
//! measurable rectangles is attained on unions of steps. For a fixed row set
//! `S` the best column set takes every column whose partial sum has the sign
//! being maximized, so the exact routine enumerates the `2^m` row sets only.
//! The enumeration walks each chunk of subsets in Gray-code order, updating
//! column sums by one row per step; chunk starting sums are recomputed from
//! scratch so rounding does not accumulate across chunks.

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{argument, Error, Result};
use crate::graphon::KernelMatrix;
use crate::numeric::{self, KahanSum};

/// Largest step count accepted by the exact routines.
pub const EXACT_MAX_M: usize = 26;

/// Rows enumerated by Gray code inside one chunk.
const LOW_BITS: usize = 12;

/// Rectangle `S × T` of step indices (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutNorm {
    pub value: f64,
    pub witness: Witness,
}

fn check_exact(x: &KernelMatrix) -> Result<()> {
    if x.m() > EXACT_MAX_M {
        return Err(Error::Resource(format!(
            "exact cut norm enumerates 2^{} row sets; the limit is m = {EXACT_MAX_M}, use the heuristic",
            x.m()
        )));
    }
    Ok(())
}

/// Maximize `score(column sums of S)` over all row sets `S`. Ties keep the
/// earliest set in enumeration order, independent of the thread count.
fn best_row_set(x: &KernelMatrix, score: impl Fn(&[f64]) -> f64 + Sync) -> (f64, u64) {
    let m = x.m();
    let low = m.min(LOW_BITS);
    let high = m - low;
    let vals = x.values();

    let chunk = |h: u64| -> (f64, u64) {
        let mut sums = vec![0.0; m];
        for b in 0..high {
            if h >> b & 1 == 1 {
                let row = &vals[(low + b) * m..(low + b + 1) * m];
                for (s, v) in sums.iter_mut().zip(row) {
                    *s += v;
                }
            }
        }
        let high_mask = h << low;
        let mut gray: u64 = 0;
        let mut best = (score(&sums), high_mask);
        for t in 1u64..1 << low {
            let bit = t.trailing_zeros() as usize;
            gray ^= 1 << bit;
            let row = &vals[bit * m..(bit + 1) * m];
            if gray >> bit & 1 == 1 {
                for (s, v) in sums.iter_mut().zip(row) {
                    *s += v;
                }
            } else {
                for (s, v) in sums.iter_mut().zip(row) {
                    *s -= v;
                }
            }
            let value = score(&sums);
            if value > best.0 {
                best = (value, high_mask | gray);
            }
        }
        best
    };

    let parts: Vec<(f64, u64)> = (0..1u64 << high).into_par_iter().map(chunk).collect();
    parts
        .into_iter()
        .fold((f64::NEG_INFINITY, 0), |best, p| if p.0 > best.0 { p } else { best })
}

fn mask_to_set(mask: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|&i| mask >> i & 1 == 1).collect()
}

fn column_sums(x: &KernelMatrix, rows: &[usize]) -> Vec<f64> {
    (0..x.m())
        .map(|j| rows.iter().map(|&i| x.get(i, j)).collect::<KahanSum>().total())
        .collect()
}

/// `Σ_{S×T} X / m²`, summed with compensation.
pub fn rectangle_mean(x: &KernelMatrix, rows: &[usize], cols: &[usize]) -> f64 {
    let mut acc = KahanSum::new();
    for &i in rows {
        for &j in cols {
            acc.add(x.get(i, j));
        }
    }
    acc.total() / (x.m() * x.m()) as f64
}

/// Exact cut norm with a maximizing rectangle. Columns whose partial sum is
/// exactly zero are left out of the witness.
pub fn cut_norm_exact(x: &KernelMatrix) -> Result<CutNorm> {
    check_exact(x)?;
    let m = x.m();
    let (_, mask) = best_row_set(x, |sums| {
        let (mut pos, mut neg) = (0.0, 0.0);
        for &s in sums {
            if s > 0.0 {
                pos += s;
            } else {
                neg -= s;
            }
        }
        pos.max(neg)
    });
    let rows = mask_to_set(mask, m);
    let sums = column_sums(x, &rows);
    let pos: Vec<usize> = (0..m).filter(|&j| sums[j] > 0.0).collect();
    let neg: Vec<usize> = (0..m).filter(|&j| sums[j] < 0.0).collect();
    let vp = rectangle_mean(x, &rows, &pos);
    let vn = -rectangle_mean(x, &rows, &neg);
    let (value, cols) = if vp >= vn { (vp, pos) } else { (vn, neg) };
    Ok(CutNorm {
        value: value.max(0.0),
        witness: Witness { rows, cols },
    })
}

/// `max_{s ∈ {±1}^m} Σ_j |Σ_i s_i X_ij| / m²`, the `L_∞ → L_1` norm of the
/// step kernel. Lies between `‖X‖_□` and `4‖X‖_□`.
pub fn bilinear_pm1_norm(x: &KernelMatrix) -> Result<f64> {
    check_exact(x)?;
    let m = x.m();
    let all: Vec<usize> = (0..m).collect();
    let totals = column_sums(x, &all);
    let (_, mask) = best_row_set(x, |sums| {
        sums.iter().zip(&totals).map(|(s, t)| (2.0 * s - t).abs()).sum()
    });
    // Recompute the winner's value from scratch.
    let signs: Vec<f64> = (0..m).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
    let value: f64 = (0..m)
        .map(|j| {
            (0..m)
                .map(|i| signs[i] * x.get(i, j))
                .collect::<KahanSum>()
                .total()
                .abs()
        })
        .collect::<KahanSum>()
        .total();
    Ok(value / (m * m) as f64)
}

/// Alternating maximization: for a sign `σ`, fix `S` and take the columns
/// with `σ·colsum > 0`, then fix `T` and take the rows with `σ·rowsum > 0`,
/// until nothing changes. Restart 0 starts from all rows; the others from
/// random row sets drawn from stream `r` of the seeded generator. The result
/// is the value of an actual rectangle, hence a lower bound on the cut norm.
pub fn cut_norm_heuristic(x: &KernelMatrix, restarts: usize, seed: u64) -> Result<CutNorm> {
    if restarts == 0 {
        return Err(argument("at least one restart is required"));
    }
    let m = x.m();
    let mut best = CutNorm {
        value: 0.0,
        witness: Witness {
            rows: Vec::new(),
            cols: Vec::new(),
        },
    };
    for r in 0..restarts {
        let start: Vec<bool> = if r == 0 {
            vec![true; m]
        } else {
            let mut rng = numeric::rng(seed, r as u64);
            (0..m).map(|_| rng.gen_bool(0.5)).collect()
        };
        for sign in [1.0, -1.0] {
            let (value, witness) = ascend(x, start.clone(), sign);
            if value > best.value {
                best = CutNorm { value, witness };
            }
        }
    }
    Ok(best)
}

fn ascend(x: &KernelMatrix, mut rows: Vec<bool>, sign: f64) -> (f64, Witness) {
    let m = x.m();
    let mut cols = vec![false; m];
    let mut value = f64::NEG_INFINITY;
    for _ in 0..4 * m + 4 {
        let new_cols: Vec<bool> = (0..m)
            .map(|j| sign * (0..m).filter(|&i| rows[i]).map(|i| x.get(i, j)).sum::<f64>() > 0.0)
            .collect();
        let new_rows: Vec<bool> = (0..m)
            .map(|i| sign * (0..m).filter(|&j| new_cols[j]).map(|j| x.get(i, j)).sum::<f64>() > 0.0)
            .collect();
        let r: Vec<usize> = (0..m).filter(|&i| new_rows[i]).collect();
        let c: Vec<usize> = (0..m).filter(|&j| new_cols[j]).collect();
        let v = sign * rectangle_mean(x, &r, &c);
        let stable = new_rows == rows && new_cols == cols;
        if v <= value || stable {
            if v > value {
                value = v;
                rows = new_rows;
                cols = new_cols;
            }
            break;
        }
        value = v;
        rows = new_rows;
        cols = new_cols;
    }
    let witness = Witness {
        rows: (0..m).filter(|&i| rows[i]).collect(),
        cols: (0..m).filter(|&j| cols[j]).collect(),
    };
    (value.max(0.0), witness)
}
