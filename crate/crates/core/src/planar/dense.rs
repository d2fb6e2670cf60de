//! Dense kernels on row-major square matrices.

use crate::error::{Error, Result};

/// Columns per panel of the blocked pair elimination.
const PANEL: usize = 32;

/// A pair pivot is accepted when it is at least this fraction of the
/// largest entry in its column.
const THRESHOLD: f64 = 0.1;

/// Column `p` of `a` below row `c`, brought up to date with the panel
/// columns `j0..c` already eliminated, written into `w[c..dim]`.
fn updated_column(a: &[f64], dim: usize, y: &[f64], j0: usize, c: usize, p: usize, w: &mut [f64]) {
    let t = c - j0;
    for r in c..dim {
        w[r] = a[r * dim + p];
    }
    for s in (0..t).step_by(2) {
        let (p0, p1) = (a[p * dim + j0 + s], a[p * dim + j0 + s + 1]);
        for r in c..dim {
            w[r] += y[r * PANEL + s] * p0 + y[r * PANEL + s + 1] * p1;
        }
    }
}

/// Symmetric swap of positions `i` and `j`, carried along the panel
/// multipliers, the two work columns and the labels.
fn swap_positions(a: &mut [f64], dim: usize, y: &mut [f64], ws: [&mut [f64]; 2], order: &mut [usize], i: usize, j: usize) {
    if i == j {
        return;
    }
    for k in 0..dim {
        a.swap(i * dim + k, j * dim + k);
    }
    for k in 0..dim {
        a.swap(k * dim + i, k * dim + j);
    }
    for k in 0..PANEL {
        y.swap(i * PANEL + k, j * PANEL + k);
    }
    for w in ws {
        w.swap(i, j);
    }
    order.swap(i, j);
}

/// Eliminates rows and columns of the skew-symmetric `dim x dim` matrix
/// `a` from its leading `nf` positions, two at a time, leaving the Schur
/// complement in the trailing block.
///
/// Each step pairs a column with its largest entry among the leading
/// positions, provided that entry is within [`THRESHOLD`] of the column
/// maximum. Positions are permuted as pairs are chosen and `order` follows
/// the permutation. Without `complete`, elimination stops once no
/// acceptable pair is left; with it, the best available pair is taken
/// instead.
///
/// Returns the log of the Pfaffian magnitude of the eliminated block and
/// the number of eliminated positions.
pub(crate) fn eliminate_pivoted(
    a: &mut [f64],
    dim: usize,
    nf: usize,
    order: &mut [usize],
    complete: bool,
) -> Result<(f64, usize)> {
    debug_assert!(nf <= dim && a.len() == dim * dim && order.len() == dim);
    let mut y = vec![0.0; dim * PANEL];
    let mut wp = vec![0.0; dim];
    let mut wq = vec![0.0; dim];
    let mut log_pf = 0.0;
    let mut done = 0;
    while done + 2 <= nf {
        let j0 = done;
        let mut t = 0;
        let mut stalled = false;
        while t + 2 <= PANEL && j0 + t + 2 <= nf {
            let c = j0 + t;
            let mut choice = None;
            let mut best = (0.0, 0, 0);
            for p in c..nf {
                updated_column(a, dim, &y, j0, c, p, &mut wp);
                let (mut colmax, mut fmax, mut q) = (0.0f64, 0.0f64, p);
                for (r, x) in wp[c..dim].iter().enumerate() {
                    let (r, x) = (r + c, x.abs());
                    if r != p {
                        colmax = colmax.max(x);
                        if r < nf && x > fmax {
                            fmax = x;
                            q = r;
                        }
                    }
                }
                if fmax == 0.0 {
                    continue;
                }
                if fmax >= THRESHOLD * colmax {
                    choice = Some((p, q));
                    break;
                }
                if fmax / colmax > best.0 {
                    best = (fmax / colmax, p, q);
                }
            }
            let (p, q) = match choice {
                Some(pq) => pq,
                None if complete && best.0 > 0.0 => {
                    updated_column(a, dim, &y, j0, c, best.1, &mut wp);
                    (best.1, best.2)
                }
                None if complete => return Err(Error::Numerical("singular block in elimination".into())),
                None => {
                    stalled = true;
                    break;
                }
            };
            updated_column(a, dim, &y, j0, c, q, &mut wq);
            swap_positions(a, dim, &mut y, [&mut wp, &mut wq], order, c, p);
            let q = if q == c { p } else { q };
            swap_positions(a, dim, &mut y, [&mut wp, &mut wq], order, c + 1, q);
            for r in c..dim {
                a[r * dim + c] = wp[r];
                a[r * dim + c + 1] = wq[r];
            }
            let pivot = wq[c];
            log_pf += pivot.abs().ln();
            let inv = 1.0 / pivot;
            for r in c + 2..dim {
                y[r * PANEL + t] = wq[r] * inv;
                y[r * PANEL + t + 1] = -wp[r] * inv;
            }
            t += 2;
        }
        let rest = j0 + t;
        let mr = dim - rest;
        if mr > 0 && t > 0 {
            let base = a.as_mut_ptr();
            // SAFETY: reads touch columns j0..rest and the panel buffer, the
            // write touches columns rest..dim of rows rest..dim; all in bounds.
            unsafe {
                matrixmultiply::dgemm(
                    mr,
                    t,
                    mr,
                    1.0,
                    y.as_ptr().add(rest * PANEL),
                    PANEL as isize,
                    1,
                    base.add(rest * dim + j0),
                    1,
                    dim as isize,
                    1.0,
                    base.add(rest * dim + rest),
                    dim as isize,
                    1,
                );
            }
        }
        done = rest;
        if stalled {
            break;
        }
    }
    Ok((log_pf, done))
}

/// In-place LU factorisation with partial pivoting. Returns the row
/// permutation and `ln |det a|`.
pub(crate) fn lu(a: &mut [f64], n: usize) -> Result<(Vec<usize>, f64)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut log_det = 0.0;
    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if a[i * n + k].abs() > a[p * n + k].abs() {
                p = i;
            }
        }
        let pivot = a[p * n + k];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Numerical(format!("singular matrix at column {k}")));
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
        }
        log_det += pivot.abs().ln();
        let (head, tail) = a.split_at_mut((k + 1) * n);
        let row_k = &head[k * n..];
        for i in 0..n - k - 1 {
            let row = &mut tail[i * n..(i + 1) * n];
            let l = row[k] / pivot;
            row[k] = l;
            if l != 0.0 {
                for j in k + 1..n {
                    row[j] -= l * row_k[j];
                }
            }
        }
    }
    Ok((perm, log_det))
}

/// `ln |det a|` of a dense matrix.
pub(crate) fn log_abs_det(mut a: Vec<f64>, n: usize) -> Result<f64> {
    Ok(lu(&mut a, n)?.1)
}

/// Inverse of a dense matrix.
pub(crate) fn invert(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    let (perm, _) = lu(&mut a, n)?;
    let mut x = vec![0.0; n * n];
    for (i, &p) in perm.iter().enumerate() {
        x[i * n + p] = 1.0;
    }
    // forward substitution with the unit lower factor, row by row
    for i in 0..n {
        let (done, rest) = x.split_at_mut(i * n);
        let row = &mut rest[..n];
        for j in 0..i {
            let l = a[i * n + j];
            if l != 0.0 {
                let src = &done[j * n..(j + 1) * n];
                for (r, s) in row.iter_mut().zip(src) {
                    *r -= l * s;
                }
            }
        }
    }
    for i in (0..n).rev() {
        let (head, rest) = x.split_at_mut((i + 1) * n);
        let row = &mut head[i * n..];
        for j in i + 1..n {
            let u = a[i * n + j];
            if u != 0.0 {
                let src = &rest[(j - i - 1) * n..(j - i) * n];
                for (r, s) in row.iter_mut().zip(src) {
                    *r -= u * s;
                }
            }
        }
        let d = 1.0 / a[i * n + i];
        for r in row.iter_mut() {
            *r *= d;
        }
    }
    Ok(x)
}
