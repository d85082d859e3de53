//! Dense complex eigenvalue solver: Householder reduction to Hessenberg
//! form followed by shifted QR iteration with deflation.
//!
//! Capped at dimension 64. Above that, spectral sets are approximated by
//! Gelfand bounds alone (see `linalg::gelfand`).

use num_complex::Complex;

use crate::error::{CoreError, Result};
use crate::linalg::{C64, CMatrix};

/// Hard cap on the eigen-solver dimension.
pub const EIGEN_DIM_CAP: usize = 64;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 100;

fn zero() -> C64 {
    Complex::new(0.0, 0.0)
}

/// In-place unitary reduction to upper Hessenberg form.
fn hessenberg(h: &mut [C64], d: usize) {
    for k in 0..d.saturating_sub(2) {
        // Householder vector for column k, rows k+1..d
        let mut x: Vec<C64> = (k + 1..d).map(|i| h[i * d + k]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        x[0] += phase * xnorm;
        let vnorm_sqr: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm_sqr;

        // H ← P H with P = I - tau·v vᴴ acting on rows k+1..d
        for j in 0..d {
            let mut dot = zero();
            for (off, vi) in x.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + off) * d + j];
            }
            dot *= tau;
            for (off, vi) in x.iter().enumerate() {
                let delta = vi * dot;
                h[(k + 1 + off) * d + j] -= delta;
            }
        }
        // H ← H P acting on columns k+1..d
        for i in 0..d {
            let mut dot = zero();
            for (off, vi) in x.iter().enumerate() {
                dot += h[i * d + k + 1 + off] * vi;
            }
            dot *= tau;
            for (off, vi) in x.iter().enumerate() {
                let delta = dot * vi.conj();
                h[i * d + k + 1 + off] -= delta;
            }
        }
    }
    // clear entries below the first subdiagonal (exact zeros by construction)
    for i in 0..d {
        for j in 0..i.saturating_sub(1) {
            h[i * d + j] = zero();
        }
    }
}

/// Unitary 2x2 rotation [[c, s], [-conj(s), c]] (c real ≥ 0) mapping
/// (f, g) to (r, 0).
fn givens(f: C64, g: C64) -> (f64, C64) {
    if g.norm() == 0.0 {
        return (1.0, zero());
    }
    if f.norm() == 0.0 {
        return (0.0, g.conj() / g.norm());
    }
    let fa = f.norm();
    let denom = (fa * fa + g.norm_sqr()).sqrt();
    let c = fa / denom;
    let s = (f / fa) * g.conj() / denom;
    (c, s)
}

/// Eigenvalue of [[a, b], [c, d]] closest to d (Wilkinson shift).
fn wilkinson_shift(a: C64, b: C64, c_: C64, d_: C64) -> C64 {
    let tr_half = (a + d_) * 0.5;
    let det = a * d_ - b * c_;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d_).norm() <= (l2 - d_).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a dense complex matrix, d ≤ 64.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let d = a.dim();
    if d > EIGEN_DIM_CAP {
        return Err(CoreError::InvalidParameter(format!(
            "eigen-solver cap is dimension {EIGEN_DIM_CAP}, got {d}"
        )));
    }
    if d == 1 {
        return Ok(vec![a.entry(0, 0)]);
    }

    let mut h = a.entries().to_vec();
    hessenberg(&mut h, d);

    let eps = f64::EPSILON;
    let mut eigs: Vec<C64> = Vec::with_capacity(d);
    let mut hi = d; // active block is rows/cols [0, hi)
    let mut sweeps = 0usize;

    while hi > 0 {
        // deflate negligible subdiagonals
        for i in 0..hi - 1 {
            let scale = h[i * d + i].norm() + h[(i + 1) * d + i + 1].norm();
            if h[(i + 1) * d + i].norm() <= eps * scale.max(f64::MIN_POSITIVE) {
                h[(i + 1) * d + i] = zero();
            }
        }
        if hi == 1 {
            eigs.push(h[0]);
            hi = 0;
            continue;
        }
        if h[(hi - 1) * d + hi - 2].norm() == 0.0 {
            eigs.push(h[(hi - 1) * d + hi - 1]);
            hi -= 1;
            sweeps = 0;
            continue;
        }
        // start of the trailing unreduced block
        let mut lo = hi - 1;
        while lo > 0 && h[lo * d + lo - 1].norm() != 0.0 {
            lo -= 1;
        }

        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(CoreError::Numeric(format!(
                "QR iteration did not deflate after {MAX_SWEEPS_PER_EIGENVALUE} sweeps (dim {d})"
            )));
        }
        let mu = if sweeps.is_multiple_of(12) {
            // exceptional shift to break symmetry-induced cycles
            h[(hi - 1) * d + hi - 1] + Complex::new(h[(hi - 1) * d + hi - 2].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 2) * d + hi - 2],
                h[(hi - 2) * d + hi - 1],
                h[(hi - 1) * d + hi - 2],
                h[(hi - 1) * d + hi - 1],
            )
        };

        // explicit shifted QR step on the active block [lo, hi)
        for i in lo..hi {
            h[i * d + i] -= mu;
        }
        let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo - 1);
        for i in lo..hi - 1 {
            let (c, s) = givens(h[i * d + i], h[(i + 1) * d + i]);
            // rows i, i+1: [c s; -conj(s) c]
            for j in i..hi {
                let t1 = h[i * d + j];
                let t2 = h[(i + 1) * d + j];
                h[i * d + j] = t1 * c + t2 * s;
                h[(i + 1) * d + j] = -t1 * s.conj() + t2 * c;
            }
            rots.push((c, s));
        }
        for (idx, (c, s)) in rots.iter().enumerate() {
            let i = lo + idx;
            // columns i, i+1: multiply by the adjoint rotation on the right
            let top = (i + 2).min(hi);
            for r in lo..top {
                let t1 = h[r * d + i];
                let t2 = h[r * d + i + 1];
                h[r * d + i] = t1 * *c + t2 * s.conj();
                h[r * d + i + 1] = -t1 * *s + t2 * *c;
            }
        }
        for i in lo..hi {
            h[i * d + i] += mu;
        }
    }

    eigs.reverse();
    Ok(eigs)
}

/// Spectral radius from the eigen-solver: a near-exact lower bound on r(A)
/// for d ≤ 64.
pub fn spectral_radius_from_eigen(a: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|l| l.norm())
        .fold(0.0_f64, f64::max))
}
