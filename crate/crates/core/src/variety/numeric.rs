//! Double-precision root finding and dense complex linear solves used by
//! the zero-dimensional solver and the branch expansions.

use num_complex::Complex64;

/// All complex roots of Σ coeffs[i]·x^i by simultaneous iteration.
///
/// Coefficients ascending, leading coefficient nonzero.  Deterministic:
/// the initial guesses sit on a circle of radius derived from the Cauchy
/// bound at fixed angles.  Multiple roots converge to a cluster rather
/// than a single point; callers group them.
pub fn all_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while let Some(last) = c.last() {
        if last.norm() == 0.0 && c.len() > 1 {
            c.pop();
        } else {
            break;
        }
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|a| a.norm())
            .fold(0.0f64, f64::max);

    let mut roots: Vec<Complex64> = (0..n)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.4;
            radius * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    let eval = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in monic.iter().rev() {
            acc = acc * x + a;
        }
        acc
    };

    for _ in 0..600 {
        let mut moved = 0.0f64;
        for j in 0..n {
            let pj = eval(roots[j]);
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..n {
                if k != j {
                    denom *= roots[j] - roots[k];
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let delta = pj / denom;
            roots[j] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-14 * radius.max(1.0) {
            break;
        }
    }
    roots
}

/// Solve a dense complex square system by Gaussian elimination with
/// partial pivoting; `None` when the matrix is numerically singular.
pub fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .norm()
                .partial_cmp(&a[j][col].norm())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].norm() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
            let sub = factor * b[col];
            b[row] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}
