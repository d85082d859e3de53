//! Resolvent-side verifications for the evolution semigroup 𝒯(1): the
//! rotation identity tying R(z, 𝒯(1)) to the convolution operator, resolvent
//! norm estimates on the unit circle and radial spot points, the spectral
//! disk check, and the elementary inequality 1/(1-r) ≥ -1/ln(r).
//!
//! 𝒯(1) is nilpotent on every truncation, so its truncated eigenvalues say
//! nothing about r(𝒯(1)); every spectral statement here goes through the
//! semigroup power-norm brackets of the family module instead.

use crate::conv::{NormBracket, apply_convolution, apply_convolution_adjoint};
use crate::error::{CoreError, Result};
use crate::family::{EvolutionFamily, SemigroupRadiusBracket};
use crate::linalg::{C64, CMatrix, CVector};
use crate::space::{SpaceSpec, TruncatedSequence, seq_norm};

/// Default radial spot-check moduli beyond the unit circle.
pub const RADIAL_SPOTS: [f64; 3] = [1.25, 2.0, 10.0];

/// Equally spaced points on the unit circle.
#[derive(Debug, Clone)]
pub struct UnimodularGrid {
    pub count: usize,
}

impl UnimodularGrid {
    pub fn new(count: usize) -> Self {
        Self { count }
    }

    pub fn points(&self) -> Vec<C64> {
        (0..self.count)
            .map(|m| {
                let t = std::f64::consts::TAU * m as f64 / self.count as f64;
                C64::new(t.cos(), t.sin())
            })
            .collect()
    }
}

/// g_j = z^j·f_j for |z| = 1; an entrywise-modulus-preserving map, hence an
/// isometry of every space in ℳ.
pub fn rotate_sequence(f: &TruncatedSequence, z: C64) -> Result<TruncatedSequence> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(CoreError::InvalidParameter(format!(
            "rotation requires |z| = 1, got |z| = {}",
            z.norm()
        )));
    }
    Ok(scale_by_powers(f, z))
}

fn scale_by_powers(f: &TruncatedSequence, z: C64) -> TruncatedSequence {
    let mut out = TruncatedSequence::zeros(f.dim(), f.last_index());
    let mut zp = C64::new(1.0, 0.0);
    for j in 0..=f.last_index() {
        if j > 0 {
            zp *= z;
            out.set_entry(j, f.entry(j).scale(zp)).expect("j >= 1");
        }
        // entry 0 stays zero: z^0·f_0 = 0
    }
    out
}

/// Truncated Neumann sum Σ_{k=0}^{K} (𝒯(k)f)/z^{k+1} with K = last index of
/// f. On the truncation this is exact: 𝒯(k) shifts by k, so terms k > n
/// cannot touch entry n.
pub fn truncated_semigroup_resolvent(
    fam: &EvolutionFamily,
    z: C64,
    f: &TruncatedSequence,
) -> Result<TruncatedSequence> {
    if z.norm() < 1.0 - 1e-12 {
        return Err(CoreError::InvalidParameter(format!(
            "resolvent sum requires |z| >= 1, got {}",
            z.norm()
        )));
    }
    if f.dim() != fam.dim() {
        return Err(CoreError::Domain(
            "sequence dimension does not match the family".into(),
        ));
    }
    let n_last = f.last_index();
    let mut out = TruncatedSequence::zeros(fam.dim(), n_last);
    for n in 1..=n_last {
        let mut acc = CVector::zeros(fam.dim());
        let mut z_pow = z; // z^{k+1} at k = 0
        for k in 0..=n {
            let j = n - k;
            if j >= 1 || k == 0 {
                // U(n, j)f_j/z^{k+1}; the j = 0 term vanishes with f_0 = 0
                if j >= 1 {
                    let u = fam.propagator(n, j)?;
                    let term = u.mul_vec(f.entry(j)).scale(C64::new(1.0, 0.0) / z_pow);
                    acc = acc.add(&term);
                }
            }
            z_pow *= z;
        }
        out.set_entry(n, acc)?;
    }
    Ok(out)
}

/// Max entrywise deviation between the Neumann form of R(z, 𝒯(1))f and the
/// rotation form z^{-(n+1)}(U∗(z^j f_j))(n). The identity is exact in exact
/// arithmetic, so the contract is deviation ≤ 1e-10.
pub fn rotation_identity_check(
    fam: &EvolutionFamily,
    z: C64,
    f: &TruncatedSequence,
) -> Result<f64> {
    let lhs = truncated_semigroup_resolvent(fam, z, f)?;
    let rotated = rotate_sequence(f, z)?;
    let conv = apply_convolution(fam, &rotated)?;
    let mut rhs = TruncatedSequence::zeros(f.dim(), f.last_index());
    let mut z_pow = z; // z^{n+1} at n = 0
    for n in 0..=f.last_index() {
        if n >= 1 {
            rhs.set_entry(n, conv.entry(n).scale(C64::new(1.0, 0.0) / z_pow))?;
        }
        z_pow *= z;
    }
    Ok(lhs.max_abs_diff(&rhs))
}

/// Applies the truncated resolvent through its convolution form:
/// V_z f = diag(z^{-(n+1)}) ∘ 𝒦 ∘ diag(z^j) f, algebraically equal to the
/// Neumann sum for every z ≠ 0.
fn apply_resolvent_form(
    fam: &EvolutionFamily,
    z: C64,
    f: &TruncatedSequence,
) -> Result<TruncatedSequence> {
    let scaled = scale_by_powers(f, z);
    let conv = apply_convolution(fam, &scaled)?;
    let mut out = TruncatedSequence::zeros(f.dim(), f.last_index());
    let mut z_pow = z;
    for n in 0..=f.last_index() {
        if n >= 1 {
            out.set_entry(n, conv.entry(n).scale(C64::new(1.0, 0.0) / z_pow))?;
        }
        z_pow *= z;
    }
    Ok(out)
}

/// Adjoint of `apply_resolvent_form` under the flat pairing.
fn apply_resolvent_form_adjoint(
    fam: &EvolutionFamily,
    z: C64,
    h: &TruncatedSequence,
) -> Result<TruncatedSequence> {
    let mut pre = TruncatedSequence::zeros(h.dim(), h.last_index());
    let mut z_pow = z;
    for n in 0..=h.last_index() {
        if n >= 1 {
            let w = (C64::new(1.0, 0.0) / z_pow).conj();
            pre.set_entry(n, h.entry(n).scale(w))?;
        }
        z_pow *= z;
    }
    let pulled = apply_convolution_adjoint(fam, &pre)?;
    let mut out = TruncatedSequence::zeros(h.dim(), h.last_index());
    let mut zj = C64::new(1.0, 0.0);
    for j in 0..=h.last_index() {
        if j >= 1 {
            zj *= z;
            out.set_entry(j, pulled.entry(j).scale(zj.conj()))?;
        }
    }
    Ok(out)
}

/// Max weighted row/col flat sums of the truncated resolvent kernel
/// z^{j-n-1}U(n, j): these are exactly its induced ℓ∞/ℓ¹ norms.
fn resolvent_rowcol_norm(
    fam: &EvolutionFamily,
    abs_z: f64,
    n: usize,
    rows: bool,
) -> Result<f64> {
    let d = fam.dim();
    let mut col_sums = vec![0.0_f64; (n + 1) * d];
    let mut best_row = 0.0_f64;
    for k in 1..=n {
        let mut u = CMatrix::identity(d);
        let mut row_acc = vec![0.0_f64; d];
        for j in (1..=k).rev() {
            let w = abs_z.powi(j as i32 - k as i32 - 1);
            for r in 0..d {
                for c in 0..d {
                    let a = u.entry(r, c).norm() * w;
                    row_acc[r] += a;
                    col_sums[j * d + c] += a;
                }
            }
            if j > 1 {
                u = u.mul(fam.spec().step(j - 1));
            }
        }
        best_row = row_acc.iter().fold(best_row, |m, &v| m.max(v));
    }
    if rows {
        Ok(best_row)
    } else {
        Ok(col_sums.iter().fold(0.0_f64, |m, &v| m.max(v)))
    }
}

/// Lower-estimates ‖R(z, 𝒯(1))‖ on the truncation for one z, through the
/// convolution form: exact weighted row/col sums on ℓ∞/c₀/ℓ¹, iterative
/// ascent with witness ratios elsewhere.
fn resolvent_norm_estimate(
    fam: &EvolutionFamily,
    space: SpaceSpec,
    z: C64,
    n: usize,
    seed: u64,
) -> Result<f64> {
    match space {
        SpaceSpec::LInfty | SpaceSpec::C0 => resolvent_rowcol_norm(fam, z.norm(), n, true),
        SpaceSpec::Lp(p) if p == 1.0 => resolvent_rowcol_norm(fam, z.norm(), n, false),
        SpaceSpec::Lp(p) if p == 2.0 => {
            let mut x = crate::space::random_unit(space, fam.dim(), n, seed)?;
            let mut prev = f64::NAN;
            for _ in 0..100 {
                let y = apply_resolvent_form(fam, z, &x)?;
                let lambda = seq_norm(&y, space).powi(2);
                if lambda == 0.0 {
                    break;
                }
                let w = apply_resolvent_form_adjoint(fam, z, &y)?;
                let nw = seq_norm(&w, space);
                if nw == 0.0 {
                    break;
                }
                x = w.scale(C64::new(1.0 / nw, 0.0));
                if !prev.is_nan() && (lambda - prev).abs() <= 1e-12 * lambda {
                    break;
                }
                prev = lambda;
            }
            let denom = seq_norm(&x, space);
            if denom == 0.0 {
                return Ok(0.0);
            }
            Ok(seq_norm(&apply_resolvent_form(fam, z, &x)?, space) / denom)
        }
        SpaceSpec::Lp(p) => {
            let q = p / (p - 1.0);
            let mut best = 0.0_f64;
            for r in 0..2u64 {
                let mut x =
                    crate::space::random_unit(space, fam.dim(), n, seed.wrapping_add(r))?;
                let mut prev = f64::NAN;
                for _ in 0..60 {
                    let y = apply_resolvent_form(fam, z, &x)?;
                    let gamma = seq_norm(&y, space);
                    if gamma == 0.0 {
                        break;
                    }
                    let back =
                        apply_resolvent_form_adjoint(fam, z, &crate::conv::duality_map(&y, p))?;
                    let dualized = crate::conv::duality_map(&back, q);
                    let np = seq_norm(&dualized, space);
                    if np == 0.0 {
                        break;
                    }
                    x = dualized.scale(C64::new(1.0 / np, 0.0));
                    if !prev.is_nan() && (gamma - prev).abs() <= 1e-13 * gamma {
                        break;
                    }
                    prev = gamma;
                }
                let denom = seq_norm(&x, space);
                if denom > 0.0 {
                    best =
                        best.max(seq_norm(&apply_resolvent_form(fam, z, &x)?, space) / denom);
                }
            }
            Ok(best)
        }
    }
}

/// Resolvent estimates over a unimodular grid plus radial spot checks,
/// compared against the convolution-norm bracket upper end.
#[derive(Debug, Clone)]
pub struct CircleBoundReport {
    pub max_on_circle: f64,
    /// (|z|, estimate) at the radial spot moduli.
    pub radial: Vec<(f64, f64)>,
    pub c_upper: f64,
    pub verdict: bool,
}

pub fn resolvent_circle_bound(
    fam: &EvolutionFamily,
    space: SpaceSpec,
    grid: &UnimodularGrid,
    n: usize,
    seed: u64,
    c_upper: f64,
) -> Result<CircleBoundReport> {
    let mut max_on_circle = 0.0_f64;
    for (idx, z) in grid.points().into_iter().enumerate() {
        let est = resolvent_norm_estimate(fam, space, z, n, seed.wrapping_add(idx as u64))?;
        max_on_circle = max_on_circle.max(est);
    }
    let mut radial = Vec::new();
    let mut all_ok = max_on_circle <= c_upper + 1e-9;
    for (idx, &r) in RADIAL_SPOTS.iter().enumerate() {
        let z = C64::new(r, 0.0);
        let est = resolvent_norm_estimate(fam, space, z, n, seed.wrapping_add(1000 + idx as u64))?;
        all_ok &= est <= c_upper + 1e-9;
        radial.push((r, est));
    }
    Ok(CircleBoundReport {
        max_on_circle,
        radial,
        c_upper,
        verdict: all_ok,
    })
}

/// The spectral-disk inequality in bracket form: r(𝒯(1)) ≤ 1 - 1/c, at the
/// non-falsification corner with slack attributable to the bracket widths.
#[derive(Debug, Clone)]
pub struct DiskBoundReport {
    pub margin: f64,
    pub tol_bracket: f64,
    pub r_upper: f64,
    pub disk_edge_lower: f64,
    pub verdict: bool,
}

pub fn disk_bound_check(sem: &SemigroupRadiusBracket, c: &NormBracket) -> DiskBoundReport {
    let disk_edge_lower = 1.0 - 1.0 / c.lower.max(1e-300);
    let disk_edge_upper = 1.0 - 1.0 / c.upper.max(1e-300);
    let tol_bracket = (disk_edge_upper - disk_edge_lower).max(0.0)
        + (sem.upper - sem.lower).max(0.0);
    let margin = disk_edge_lower - sem.upper;
    DiskBoundReport {
        margin,
        tol_bracket,
        r_upper: sem.upper,
        disk_edge_lower,
        verdict: margin >= -tol_bracket - 1e-9,
    }
}

/// Min over a grid of 1/(1-r) + 1/ln(r); the elementary inequality is
/// nonnegative on (0, 1) up to rounding (equivalent to ln r ≤ r - 1).
pub fn elementary_inequality_check(grid: &[f64]) -> Result<f64> {
    let mut min_margin = f64::INFINITY;
    for &r in grid {
        if !(r > 0.0 && r < 1.0) {
            return Err(CoreError::InvalidParameter(format!(
                "grid point {r} outside (0, 1)"
            )));
        }
        let margin = 1.0 / (1.0 - r) + 1.0 / r.ln();
        min_margin = min_margin.min(margin);
    }
    Ok(min_margin)
}

/// Uniform grid in (eps, 1-eps) with the endpoints included.
pub fn unit_interval_grid(count: usize, eps: f64) -> Vec<f64> {
    (0..count)
        .map(|i| eps + (1.0 - 2.0 * eps) * i as f64 / (count - 1) as f64)
        .collect()
}
