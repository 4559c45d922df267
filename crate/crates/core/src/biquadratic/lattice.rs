//! Rank-4 lattice reduction and short-vector enumeration. Basis rows are kept
//! as exact integer coordinates; floating point only ever sees their images
//! under a caller-supplied embedding.

use crate::error::{Error, Result};

use super::order::Coords;

const LLL_DELTA: f64 = 0.99;
const MAX_POINTS: usize = 2_000_000;

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(v: &[[f64; 4]; 4]) -> ([[f64; 4]; 4], [f64; 4]) {
    let mut mu = [[0.0; 4]; 4];
    let mut star = *v;
    let mut bnorm = [0.0; 4];
    for i in 0..4 {
        for j in 0..i {
            mu[i][j] = if bnorm[j] > 0.0 { dot(&v[i], &star[j]) / bnorm[j] } else { 0.0 };
            for t in 0..4 {
                star[i][t] -= mu[i][j] * star[j][t];
            }
        }
        bnorm[i] = dot(&star[i], &star[i]);
    }
    (mu, bnorm)
}

/// LLL-reduces integer rows with respect to `|embed(.)|^2`.
pub fn lll<E: Fn(&Coords) -> [f64; 4]>(rows: &mut [Coords; 4], embed: &E) -> Result<()> {
    let mut k = 1;
    let mut iterations = 0usize;
    while k < 4 {
        iterations += 1;
        if iterations > 200_000 {
            return Err(Error::Internal("lattice reduction did not converge".into()));
        }
        for j in (0..k).rev() {
            let v: [[f64; 4]; 4] = std::array::from_fn(|i| embed(&rows[i]));
            let (mu, _) = gram_schmidt(&v);
            let r = mu[k][j].round();
            if r != 0.0 {
                let r = r as i128;
                for t in 0..4 {
                    rows[k][t] -= r * rows[j][t];
                }
            }
        }
        let v: [[f64; 4]; 4] = std::array::from_fn(|i| embed(&rows[i]));
        let (mu, b) = gram_schmidt(&v);
        if b[k] >= (LLL_DELTA - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            k += 1;
        } else {
            rows.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    Ok(())
}

/// All nonzero `u` (one of each `±u`) with `|sum u_i embed(rows_i)|^2 <= bound`,
/// returned as coordinate vectors `sum u_i rows_i`.
pub fn short_vectors<E: Fn(&Coords) -> [f64; 4]>(
    rows: &[Coords; 4],
    embed: &E,
    bound: f64,
) -> Result<Vec<Coords>> {
    let v: [[f64; 4]; 4] = std::array::from_fn(|i| embed(&rows[i]));
    let mut q = [[0.0f64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            q[i][j] = dot(&v[i], &v[j]);
        }
    }
    for i in 0..4 {
        if q[i][i] <= 0.0 {
            return Err(Error::Internal("degenerate Gram matrix".into()));
        }
        for j in i + 1..4 {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..4 {
            for l in k..4 {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let mut out = Vec::new();
    let mut x = [0i64; 4];
    enumerate(&q, 3, bound, &mut x, &mut out)?;
    Ok(out
        .into_iter()
        .filter(|u| {
            // keep the representative whose last nonzero entry is positive
            u.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c > 0)
        })
        .map(|u| {
            let mut c = [0i128; 4];
            for (i, row) in rows.iter().enumerate() {
                for t in 0..4 {
                    c[t] += u[i] as i128 * row[t];
                }
            }
            c
        })
        .collect())
}

fn enumerate(
    q: &[[f64; 4]; 4],
    i: usize,
    remaining: f64,
    x: &mut [i64; 4],
    out: &mut Vec<[i64; 4]>,
) -> Result<()> {
    let center: f64 = -(i + 1..4).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let radius = (remaining.max(0.0) / q[i][i]).sqrt();
    let lo = (center - radius).ceil() as i64;
    let hi = (center + radius).floor() as i64;
    for xi in lo..=hi {
        x[i] = xi;
        let t = xi as f64 - center;
        let rem = remaining - q[i][i] * t * t;
        if rem < 0.0 {
            continue;
        }
        if i == 0 {
            if x.iter().any(|&c| c != 0) {
                out.push(*x);
                if out.len() > MAX_POINTS {
                    return Err(Error::Internal("short-vector enumeration exploded".into()));
                }
            }
        } else {
            enumerate(q, i - 1, rem, x, out)?;
        }
    }
    x[i] = 0;
    Ok(())
}
