use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `m = U · diag(σ) · V†`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// `rows × k` with orthonormal columns, `k = min(rows, cols)`.
    pub u: ComplexMatrix,
    /// Nonnegative, descending.
    pub singular_values: Vec<f64>,
    /// `cols × k` with orthonormal columns.
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        ComplexMatrix::from_fn(self.u.rows(), self.v.rows(), |i, j| {
            (0..k)
                .map(|l| self.u[(i, l)] * self.singular_values[l] * self.v[(j, l)].conj())
                .sum()
        })
    }

    /// Number of singular values above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > threshold).count()
    }
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Columns are rotated pairwise until mutually orthogonal; the column norms are
/// then the singular values. Wide matrices are handled through the adjoint.
pub fn singular_value_decomposition(m: &ComplexMatrix) -> Svd {
    if m.rows() < m.cols() {
        let t = singular_value_decomposition(&m.adjoint());
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<Complex64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            let mut e = vec![ZERO; cols];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = norm_sqr(&a[p]);
                let beta = norm_sqr(&a[q]);
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                // Rotate (a_p, e^{-iφ} a_q), which have a real overlap |γ|.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s, phase.conj());
                rotate(&mut v, p, q, c, s, phase.conj());
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = a.iter().map(|col| norm_sqr(col).sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let largest = norms.iter().cloned().fold(0.0, f64::max);
    let negligible = largest * f64::EPSILON * (rows.max(cols) as f64);

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    let mut zero_slots = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        if norms[j] > negligible && norms[j] > 0.0 {
            u_cols.push(a[j].iter().map(|z| z / norms[j]).collect());
        } else {
            u_cols.push(vec![ZERO; rows]);
            zero_slots.push(slot);
        }
    }
    complete_orthonormal(&mut u_cols, &zero_slots, rows);

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = ComplexMatrix::from_fn(rows, cols, |i, l| u_cols[l][i]);
    let v = ComplexMatrix::from_fn(cols, cols, |i, l| v[order[l]][i]);
    Svd { u, singular_values, v }
}

fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// `⟨x|y⟩`
fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// `x_p ← c x_p − s w x_q`, `x_q ← s x_p + c w x_q`.
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, w: Complex64) {
    let (left, right) = cols.split_at_mut(q);
    let xp = &mut left[p];
    let xq = &mut right[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bw = *b * w;
        let new_a = *a * c - bw * s;
        let new_b = *a * s + bw * c;
        *a = new_a;
        *b = new_b;
    }
}

/// Fills the listed zero columns with unit vectors orthogonal to all others,
/// drawn from the standard basis by Gram–Schmidt.
fn complete_orthonormal(cols: &mut [Vec<Complex64>], slots: &[usize], dim: usize) {
    let mut candidate = 0;
    for &slot in slots {
        while candidate < dim {
            let mut e = vec![ZERO; dim];
            e[candidate] = Complex64::new(1.0, 0.0);
            candidate += 1;
            for _ in 0..2 {
                for (k, other) in cols.iter().enumerate() {
                    if k == slot {
                        continue;
                    }
                    let proj = dot(other, &e);
                    for (x, o) in e.iter_mut().zip(other) {
                        *x -= proj * o;
                    }
                }
            }
            let n = norm_sqr(&e).sqrt();
            if n > 1e-6 {
                cols[slot] = e.into_iter().map(|z| z / n).collect();
                break;
            }
        }
    }
}
