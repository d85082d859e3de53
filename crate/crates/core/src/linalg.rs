//! Dense complex matrix and vector kernels.
//!
//! Everything here operates on the (small) state space of a family, not on
//! sequence-length-sized objects: products, induced norms, Gelfand
//! spectral-radius bounds with log-scale renormalization, LU resolvents and
//! truncated Neumann series with certified geometric tails.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};

pub type C64 = Complex<f64>;

/// Relative tolerance for the singular-value power iteration.
pub const POWER_ITER_TOL: f64 = 1e-12;
/// Iteration cap for the singular-value power iteration.
pub const POWER_ITER_CAP: usize = 10_000;
/// Condition-estimate cap beyond which a resolvent solve is rejected.
pub const RESOLVENT_COND_CAP: f64 = 1e14;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Column vector over ℂ.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    data: Vec<C64>,
}

impl CVector {
    pub fn new(data: Vec<C64>) -> Result<Self> {
        if data.is_empty() {
            return Err(CoreError::InvalidParameter("empty vector".into()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoreError::InvalidParameter(
                "vector entries must be finite".into(),
            ));
        }
        Ok(Self { data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![C64::new(0.0, 0.0); dim],
        }
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self {
            data: entries.iter().map(|&r| c(r)).collect(),
        }
    }

    /// Standard basis vector e_i.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[i] = c(1.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// p-norm for p ∈ [1, ∞]; pass `f64::INFINITY` for the sup norm.
    pub fn norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(CoreError::InvalidParameter(format!(
                "vector norm requires p in [1, inf], got {p}"
            )));
        }
        if p.is_infinite() {
            return Ok(self
                .data
                .iter()
                .map(|z| z.norm())
                .fold(0.0_f64, f64::max));
        }
        if p == 1.0 {
            return Ok(self.data.iter().map(|z| z.norm()).sum());
        }
        if p == 2.0 {
            return Ok(self.norm2());
        }
        let s: f64 = self.data.iter().map(|z| z.norm().powf(p)).sum();
        Ok(s.powf(1.0 / p))
    }

    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Conjugate-linear pairing ⟨self, other⟩ = Σ conj(self_i)·other_i.
    pub fn dot(&self, other: &Self) -> C64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Dense square matrix over ℂ, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(CoreError::InvalidParameter(
                "matrix dimension must be at least 1".into(),
            ));
        }
        if data.len() != dim * dim {
            return Err(CoreError::InvalidParameter(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoreError::InvalidParameter(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c(1.0);
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let dim = entries.len();
        let mut m = Self::zeros(dim);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * dim + i] = z;
        }
        m
    }

    /// 1x1 matrix holding a single scalar.
    pub fn scalar(z: C64) -> Self {
        Self {
            dim: 1,
            data: vec![z],
        }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(CoreError::InvalidParameter(
                    "matrix rows must all have length equal to the row count".into(),
                ));
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let converted: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(x)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.dim + j] = z;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j && self.entry(i, j) != C64::new(0.0, 0.0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        debug_assert_eq!(self.dim, v.dim());
        let d = self.dim;
        let mut out = CVector::zeros(d);
        for i in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..d {
                acc += self.data[i * d + j] * v.entries()[j];
            }
            out.entries_mut()[i] = acc;
        }
        out
    }

    /// Aᴴ v without materializing the adjoint.
    pub fn adjoint_mul_vec(&self, v: &CVector) -> CVector {
        debug_assert_eq!(self.dim, v.dim());
        let d = self.dim;
        let mut out = CVector::zeros(d);
        for j in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..d {
                acc += self.data[i * d + j].conj() * v.entries()[i];
            }
            out.entries_mut()[j] = acc;
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// A^n by binary exponentiation. No renormalization; use the Gelfand
    /// machinery for high powers near over/underflow.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0_f64, f64::max)
    }
}

/// Induced operator norms on the state space. `Interp(p)` is the
/// Riesz–Thorin upper bound ‖A‖₁^{1/p}·‖A‖_∞^{1-1/p}, which is
/// submultiplicative and exact for diagonal matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixNorm {
    One,
    Two,
    Inf,
    Interp(f64),
}

impl MatrixNorm {
    /// Certified upper bound on the induced norm (exact for One/Inf).
    pub fn upper(&self, a: &CMatrix) -> f64 {
        match self {
            MatrixNorm::One => op_norm_one(a),
            MatrixNorm::Inf => op_norm_inf(a),
            MatrixNorm::Two => (op_norm_one(a) * op_norm_inf(a)).sqrt(),
            MatrixNorm::Interp(p) => {
                let t = 1.0 / p;
                op_norm_one(a).powf(t) * op_norm_inf(a).powf(1.0 - t)
            }
        }
    }

    /// Best available value of the norm itself: exact for One/Inf, power
    /// iteration for Two, interpolation bound otherwise.
    pub fn measure(&self, a: &CMatrix, seed: u64) -> Result<f64> {
        match self {
            MatrixNorm::Two => Ok(op_norm_two(a, seed)?.value),
            _ => Ok(self.upper(a)),
        }
    }
}

/// Max absolute column sum.
pub fn op_norm_one(a: &CMatrix) -> f64 {
    let d = a.dim();
    (0..d)
        .map(|j| (0..d).map(|i| a.entry(i, j).norm()).sum::<f64>())
        .fold(0.0_f64, f64::max)
}

/// Max absolute row sum.
pub fn op_norm_inf(a: &CMatrix) -> f64 {
    let d = a.dim();
    (0..d)
        .map(|i| (0..d).map(|j| a.entry(i, j).norm()).sum::<f64>())
        .fold(0.0_f64, f64::max)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone)]
pub struct TwoNormEstimate {
    /// Rayleigh value ‖A x‖/‖x‖ of the final iterate; always a valid lower
    /// bound on σ_max, and equal to it at convergence.
    pub value: f64,
    pub iterations: usize,
}

/// Largest singular value by power iteration on AᴴA with a deterministic
/// seeded start. The input is pre-scaled to unit max-entry so very small or
/// large matrices never push the Rayleigh quotients into denormal range.
pub fn op_norm_two(a: &CMatrix, seed: u64) -> Result<TwoNormEstimate> {
    let d = a.dim();
    if a.is_zero() {
        return Ok(TwoNormEstimate {
            value: 0.0,
            iterations: 0,
        });
    }
    let scale = a.max_abs();
    let a = &a.scale(c(1.0 / scale));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = CVector::new(
        (0..d)
            .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect(),
    )?;
    let nx = x.norm2();
    x = x.scale(c(1.0 / nx));

    let mut lambda_prev = f64::NAN;
    for it in 1..=POWER_ITER_CAP {
        let y = a.mul_vec(&x);
        let lambda = y.norm2().powi(2); // xᴴ(AᴴA)x for unit x
        if lambda == 0.0 {
            // x landed in the kernel; restart from a fresh direction
            let mut v = CVector::new(
                (0..d)
                    .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                    .collect(),
            )?;
            let nv = v.norm2();
            v = v.scale(c(1.0 / nv));
            x = v;
            continue;
        }
        let z = a.adjoint_mul_vec(&y);
        let nz = z.norm2();
        if !lambda_prev.is_nan() && (lambda - lambda_prev).abs() <= POWER_ITER_TOL * lambda {
            return Ok(TwoNormEstimate {
                value: lambda.sqrt() * scale,
                iterations: it,
            });
        }
        lambda_prev = lambda;
        if nz == 0.0 {
            return Ok(TwoNormEstimate {
                value: lambda.sqrt() * scale,
                iterations: it,
            });
        }
        x = z.scale(c(1.0 / nz));
    }
    // residual of the final iterate as an eigen-pair of AᴴA
    let y = a.mul_vec(&x);
    let lambda = y.norm2().powi(2);
    let z = a.adjoint_mul_vec(&y);
    let residual = z.sub(&x.scale(c(lambda))).norm2();
    Err(CoreError::ConvergenceFailure {
        last: lambda.sqrt() * scale,
        residual,
        iterations: POWER_ITER_CAP,
    })
}

/// Gelfand data for one matrix under one submultiplicative norm:
/// log-norms of the repeated squares A^{2^k} and the derived spectral-radius
/// upper bounds ‖A^{2^k}‖^{1/2^k}.
#[derive(Debug, Clone)]
pub struct GelfandData {
    pub norm: MatrixNorm,
    /// ln‖A^{2^k}‖ for k = 0, 1, …; entries after `zero_at` are -inf.
    pub log_norms: Vec<f64>,
    /// (m = 2^k, r_ub = ‖A^m‖^{1/m}) — each a certified upper bound on r(A).
    pub upper_bounds: Vec<(u64, f64)>,
    /// First k with A^{2^k} = 0 exactly (nilpotent), if any.
    pub zero_at: Option<usize>,
}

impl GelfandData {
    /// Tightest certified upper bound on the spectral radius.
    pub fn r_upper(&self) -> f64 {
        if self.zero_at.is_some() {
            return 0.0;
        }
        self.upper_bounds
            .iter()
            .map(|&(_, r)| r)
            .fold(f64::INFINITY, f64::min)
    }

    /// Last Gelfand iterate — the working estimate of r(A).
    pub fn r_estimate(&self) -> f64 {
        if self.zero_at.is_some() {
            return 0.0;
        }
        self.upper_bounds.last().map(|&(_, r)| r).unwrap_or(0.0)
    }

    /// Certified bound sup_{j≥0} θ^{-j}‖A^j‖ ≤ exp(Σ_k max(0, ln‖A^{2^k}‖ - 2^k·ln θ)),
    /// finite when some partial term goes negative (binary expansion of j).
    /// Returns None when boundedness cannot be certified from the data.
    pub fn power_sup_bound(&self, ln_theta: f64) -> Option<f64> {
        if let Some(k0) = self.zero_at {
            // A^{2^k0} = 0, so only exponents with bits below k0 contribute
            let mut total = 0.0;
            for (k, &ln_n) in self.log_norms.iter().enumerate().take(k0) {
                let s = ln_n - ln_theta * (1u64 << k) as f64;
                if s > 0.0 {
                    total += s;
                }
            }
            return Some(total.exp());
        }
        let mut total = 0.0;
        let mut certified = false;
        for (k, &ln_n) in self.log_norms.iter().enumerate() {
            let s = ln_n - ln_theta * (1u64 << k) as f64;
            if s > 0.0 {
                total += s;
            } else {
                certified = true;
            }
        }
        // non-positive contributions must eventually dominate: the last term
        // has to be negative so every higher power of two is negative too
        let last_s = self
            .log_norms
            .last()
            .map(|&ln_n| ln_n - ln_theta * (1u64 << (self.log_norms.len() - 1)) as f64)
            .unwrap_or(0.0);
        if certified && last_s < 0.0 {
            Some(total.exp())
        } else {
            None
        }
    }

    /// Like `power_sup_bound`, restricted to exponents j ≥ j_min ≥ 1: bounds
    /// via the top bit of j, so the result decays as the window grows.
    pub fn power_sup_bound_tail(&self, ln_theta: f64, j_min: u64) -> Option<f64> {
        if j_min == 0 {
            return self.power_sup_bound(ln_theta);
        }
        let s: Vec<f64> = self
            .log_norms
            .iter()
            .enumerate()
            .map(|(k, &ln_n)| ln_n - ln_theta * (1u64 << k) as f64)
            .collect();
        if let Some(k0) = self.zero_at {
            // exponents with top bit ≥ k0 give the zero matrix
            if j_min >= (1u64 << k0) {
                return Some(0.0);
            }
            let kb = 63 - j_min.leading_zeros() as usize;
            let mut best = f64::NEG_INFINITY;
            for k_top in kb..k0 {
                let mut v = s[k_top];
                for &sk in s.iter().take(k_top) {
                    if sk > 0.0 {
                        v += sk;
                    }
                }
                best = best.max(v);
            }
            return Some(if best == f64::NEG_INFINITY { 0.0 } else { best.exp() });
        }
        let k_last = s.len() - 1;
        if !(s[k_last] < 0.0) {
            return None;
        }
        let prefix_pos: f64 = s.iter().map(|&x| x.max(0.0)).sum();
        let kb = (63 - j_min.leading_zeros() as usize).min(k_last);
        let mut best = s[k_last] + prefix_pos; // covers top bits beyond k_last
        for k_top in kb..=k_last {
            let mut v = s[k_top];
            for &sk in s.iter().take(k_top) {
                if sk > 0.0 {
                    v += sk;
                }
            }
            best = best.max(v);
        }
        Some(best.exp())
    }
}

/// Repeated squaring with per-square renormalization; the log-scale factor
/// keeps ‖A^{2^k}‖ representable far past f64 range.
pub fn gelfand(a: &CMatrix, norm: MatrixNorm, k_max: usize) -> Result<GelfandData> {
    let mut b = a.clone();
    let mut log_scale = 0.0_f64;
    let mut log_norms = Vec::new();
    let mut upper_bounds = Vec::new();
    let mut zero_at = None;
    let mut prev_ln_r = f64::NAN;
    // nilpotency shows up only once 2^k ≥ d; never stop before that
    let min_k = (usize::BITS - a.dim().leading_zeros()) as usize + 1;

    for k in 0..=k_max {
        let n_k = norm.upper(&b);
        if !n_k.is_finite() {
            return Err(CoreError::Numeric(format!(
                "overflow in Gelfand iteration at k={k} despite renormalization"
            )));
        }
        if n_k == 0.0 {
            zero_at = Some(k);
            log_norms.push(f64::NEG_INFINITY);
            upper_bounds.push((1u64 << k, 0.0));
            break;
        }
        let ln_norm = n_k.ln() + log_scale;
        let ln_r = ln_norm / (1u64 << k) as f64;
        log_norms.push(ln_norm);
        upper_bounds.push((1u64 << k, ln_r.exp()));

        if k >= min_k && !prev_ln_r.is_nan() && (ln_r - prev_ln_r).abs() < 1e-10 {
            break;
        }
        prev_ln_r = ln_r;

        if k < k_max {
            let scaled = b.scale(c(1.0 / n_k));
            b = scaled.mul(&scaled);
            log_scale = 2.0 * (log_scale + n_k.ln());
        }
    }

    Ok(GelfandData {
        norm,
        log_norms,
        upper_bounds,
        zero_at,
    })
}

/// Spectral-radius estimate with certified upper bounds (Gelfand formula,
/// default K = 40 squarings or convergence below 1e-10).
pub fn spectral_radius(a: &CMatrix) -> Result<GelfandData> {
    gelfand(a, MatrixNorm::Two, 40)
}

/// LU factorization with partial pivoting, for resolvent solves.
struct Lu {
    dim: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    singular: bool,
}

fn lu_factor(a: &CMatrix) -> Lu {
    let d = a.dim();
    let mut lu = a.entries().to_vec();
    let mut perm: Vec<usize> = (0..d).collect();
    let mut singular = false;

    for k in 0..d {
        let mut p = k;
        let mut best = lu[k * d + k].norm();
        for i in k + 1..d {
            let v = lu[i * d + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            singular = true;
            continue;
        }
        if p != k {
            for j in 0..d {
                lu.swap(k * d + j, p * d + j);
            }
            perm.swap(k, p);
        }
        let piv = lu[k * d + k];
        for i in k + 1..d {
            let m = lu[i * d + k] / piv;
            lu[i * d + k] = m;
            for j in k + 1..d {
                let sub = m * lu[k * d + j];
                lu[i * d + j] -= sub;
            }
        }
    }
    Lu {
        dim: d,
        lu,
        perm,
        singular,
    }
}

impl Lu {
    fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let d = self.dim;
        let mut x: Vec<C64> = self.perm.iter().map(|&pi| b[pi]).collect();
        for i in 1..d {
            for j in 0..i {
                let sub = self.lu[i * d + j] * x[j];
                x[i] -= sub;
            }
        }
        for i in (0..d).rev() {
            for j in i + 1..d {
                let sub = self.lu[i * d + j] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.lu[i * d + i];
        }
        x
    }

    fn inverse(&self) -> CMatrix {
        let d = self.dim;
        let mut inv = CMatrix::zeros(d);
        for j in 0..d {
            let mut e = vec![C64::new(0.0, 0.0); d];
            e[j] = c(1.0);
            let col = self.solve_vec(&e);
            for i in 0..d {
                inv.set(i, j, col[i]);
            }
        }
        inv
    }
}

/// (zI - A)^{-1} by direct solve with partial pivoting. Rejects singular or
/// ill-conditioned shifts (condition estimate above 1e14), which signals z
/// in or near σ(A).
pub fn resolvent_closed(z: C64, a: &CMatrix) -> Result<CMatrix> {
    let d = a.dim();
    let shifted = CMatrix::identity(d).scale(z).sub(a);
    let lu = lu_factor(&shifted);
    if lu.singular {
        return Err(CoreError::ResolventSingular { cond: f64::INFINITY });
    }
    let inv = lu.inverse();
    if inv.entries().iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
        return Err(CoreError::ResolventSingular { cond: f64::INFINITY });
    }
    let cond = op_norm_one(&shifted) * op_norm_one(&inv);
    if cond > RESOLVENT_COND_CAP {
        return Err(CoreError::ResolventSingular { cond });
    }
    Ok(inv)
}

#[derive(Debug, Clone)]
pub struct NeumannPartial {
    pub partial_sum: CMatrix,
    /// Certified bound on ‖partial_sum - R(z,A)‖ from the geometric majorant.
    pub tail_bound: f64,
    /// (coeff, rho) of the exponential bound ‖A^n‖ ≤ coeff·rho^n used.
    pub majorant: (f64, f64),
}

/// Truncated Neumann series Σ_{n=0}^{K} A^n/z^{n+1} with a certified tail
/// bound. Requires a certified spectral bound with rate below |z|.
pub fn resolvent_series(z: C64, a: &CMatrix, k_terms: usize) -> Result<NeumannPartial> {
    let zn = z.norm();
    let d = a.dim();

    // find a power bound ‖A^n‖ ≤ coeff·rho^n with rho < |z|
    let mut chosen: Option<(f64, f64)> = None;
    let mut powers: Vec<CMatrix> = vec![CMatrix::identity(d)];
    'outer: for k in 0..=8usize {
        let m = 1usize << k;
        while powers.len() <= m {
            let next = powers.last().unwrap().mul(a);
            powers.push(next);
        }
        let norm_m = MatrixNorm::Two.upper(&powers[m]);
        if norm_m == 0.0 {
            // nilpotent: the series terminates, tails are summed directly
            let coeff = powers
                .iter()
                .map(|p| MatrixNorm::Two.upper(p))
                .fold(1.0_f64, f64::max);
            chosen = Some((coeff, 0.0));
            break 'outer;
        }
        let rho = norm_m.powf(1.0 / m as f64);
        if rho < zn * (1.0 - 1e-9) {
            let mut coeff = 1.0_f64;
            for (s, p) in powers.iter().enumerate().take(m) {
                let val = MatrixNorm::Two.upper(p) / rho.powi(s as i32);
                if val > coeff {
                    coeff = val;
                }
            }
            chosen = Some((coeff, rho));
            break 'outer;
        }
    }
    let (coeff, rho) = chosen.ok_or_else(|| {
        CoreError::InsufficientBound(format!(
            "no certified rate below |z| = {zn:.6e} found up to power 256"
        ))
    })?;

    // partials accumulate as T_{n+1} = T_n·(A/z) to stay in range
    let a_over_z = a.scale(C64::new(1.0, 0.0) / z);
    let mut term = CMatrix::identity(d).scale(C64::new(1.0, 0.0) / z);
    let mut sum = term.clone();
    for _ in 1..=k_terms {
        term = term.mul(&a_over_z);
        sum = sum.add(&term);
    }

    let tail_bound = if rho == 0.0 {
        // nilpotent beyond the last nonzero power: series terminates
        let deg = powers.iter().rposition(|p| !p.is_zero()).unwrap_or(0);
        if k_terms >= deg {
            0.0
        } else {
            // sum the finitely many remaining terms' norms directly
            let mut t = 0.0;
            for n in k_terms + 1..=deg {
                t += MatrixNorm::Two.upper(&powers[n]) / zn.powi(n as i32 + 1);
            }
            t
        }
    } else {
        coeff * (rho / zn).powi(k_terms as i32 + 1) / (zn - rho)
    };

    Ok(NeumannPartial {
        partial_sum: sum,
        tail_bound,
        majorant: (coeff, rho),
    })
}

#[derive(Debug, Clone)]
pub struct ResolventDistanceCheck {
    pub lhs: f64,
    pub distance: f64,
    pub resolvent_norm: f64,
    pub verdict: bool,
}

/// Checks ‖R(z,A)‖·dist(z, σ(A)) ≥ 1 using the eigen-solver for the
/// spectrum (d ≤ 64).
pub fn resolvent_distance_check(z: C64, a: &CMatrix) -> Result<ResolventDistanceCheck> {
    let eigs = crate::eigen::eigenvalues(a)?;
    let distance = eigs
        .iter()
        .map(|&l| (z - l).norm())
        .fold(f64::INFINITY, f64::min);
    let r = resolvent_closed(z, a)?;
    let resolvent_norm = op_norm_two(&r, 7)?.value;
    let lhs = resolvent_norm * distance;
    Ok(ResolventDistanceCheck {
        lhs,
        distance,
        resolvent_norm,
        verdict: lhs >= 1.0 - 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn vec_norm_pythagorean() {
        let v = CVector::from_real(&[3.0, 4.0]);
        approx(v.norm(2.0).unwrap(), 5.0, 1e-15);
    }

    #[test]
    fn vec_norm_sup() {
        let v = CVector::from_real(&[1.0, -1.0]);
        approx(v.norm(f64::INFINITY).unwrap(), 1.0, 0.0);
    }

    #[test]
    fn vec_norm_zero_any_p() {
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            assert_eq!(CVector::zeros(4).norm(p).unwrap(), 0.0);
        }
    }

    #[test]
    fn vec_norm_rejects_p_below_one() {
        assert!(CVector::zeros(2).norm(0.5).is_err());
    }

    #[test]
    fn op_norm_identity_is_one() {
        let id = CMatrix::identity(3);
        assert_eq!(op_norm_one(&id), 1.0);
        assert_eq!(op_norm_inf(&id), 1.0);
        approx(op_norm_two(&id, 1).unwrap().value, 1.0, 1e-12);
    }

    #[test]
    fn op_norm_diag_half() {
        let a = CMatrix::diag(&[C64::new(0.5, 0.0)]);
        approx(op_norm_two(&a, 1).unwrap().value, 0.5, 1e-12);
    }

    #[test]
    fn op_norm_two_nilpotent_jordan_block() {
        // [[0,1],[0,0]] has singular values {1, 0}
        let a = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        approx(op_norm_two(&a, 1).unwrap().value, 1.0, 1e-10);
    }

    #[test]
    fn gelfand_diag_exact_at_every_k() {
        let a = CMatrix::diag(&[C64::new(0.5, 0.0)]);
        let g = spectral_radius(&a).unwrap();
        for &(_, r) in &g.upper_bounds {
            approx(r, 0.5, 1e-12);
        }
        approx(g.r_estimate(), 0.5, 1e-12);
    }

    #[test]
    fn gelfand_jordan_converges() {
        let a = CMatrix::from_real_rows(&[vec![0.5, 1.0], vec![0.0, 0.5]]).unwrap();
        let g = spectral_radius(&a).unwrap();
        approx(g.r_estimate(), 0.5, 1e-6);
        // every reported bound is a genuine upper bound
        for &(_, r) in &g.upper_bounds {
            assert!(r >= 0.5 - 1e-9);
        }
    }

    #[test]
    fn gelfand_zero_matrix() {
        let g = spectral_radius(&CMatrix::zeros(3)).unwrap();
        assert_eq!(g.r_upper(), 0.0);
        assert_eq!(g.r_estimate(), 0.0);
    }

    #[test]
    fn resolvent_closed_diagonal() {
        let a = CMatrix::diag(&[C64::new(0.5, 0.0)]);
        let r = resolvent_closed(C64::new(2.0, 0.0), &a).unwrap();
        approx(r.entry(0, 0).re, 1.0 / 1.5, 1e-14);

        let r1 = resolvent_closed(C64::new(1.0, 0.0), &a).unwrap();
        approx(r1.entry(0, 0).re, 2.0, 1e-14);
    }

    #[test]
    fn resolvent_closed_rejects_spectrum_point() {
        let a = CMatrix::diag(&[C64::new(0.5, 0.0)]);
        assert!(matches!(
            resolvent_closed(C64::new(0.5, 0.0), &a),
            Err(CoreError::ResolventSingular { .. })
        ));
    }

    #[test]
    fn resolvent_series_matches_closed_within_tail() {
        let a = CMatrix::diag(&[C64::new(0.5, 0.0)]);
        let z = C64::new(2.0, 0.0);
        let part = resolvent_series(z, &a, 10).unwrap();
        let closed = resolvent_closed(z, &a).unwrap();
        let dev = part.partial_sum.sub(&closed).max_abs();
        assert!(dev <= part.tail_bound + 1e-15);
        assert!(part.tail_bound <= 3.3e-7, "tail {}", part.tail_bound);
    }

    #[test]
    fn resolvent_series_zero_matrix_exact() {
        let a = CMatrix::zeros(2);
        let part = resolvent_series(C64::new(2.0, 0.0), &a, 0).unwrap();
        approx(part.partial_sum.entry(0, 0).re, 0.5, 1e-15);
        assert_eq!(part.tail_bound, 0.0);
    }

    #[test]
    fn resolvent_series_first_term_residual() {
        let a = CMatrix::diag(&[C64::new(0.5, 0.0)]);
        let z = C64::new(10.0, 0.0);
        let part = resolvent_series(z, &a, 0).unwrap();
        approx(part.partial_sum.entry(0, 0).re, 0.1, 1e-15);
        // Σ_{n≥1} 0.5^n/10^{n+1} = 1/190
        approx(part.tail_bound, 1.0 / 190.0, 1e-12);
    }

    #[test]
    fn resolvent_series_insufficient_bound() {
        let a = CMatrix::diag(&[C64::new(0.9, 0.0)]);
        assert!(matches!(
            resolvent_series(C64::new(0.5, 0.0), &a, 4),
            Err(CoreError::InsufficientBound(_))
        ));
    }

    #[test]
    fn distance_check_normal_cases() {
        let a = CMatrix::diag(&[C64::new(0.5, 0.0)]);
        let chk = resolvent_distance_check(C64::new(1.0, 0.0), &a).unwrap();
        approx(chk.lhs, 1.0, 1e-9);
        assert!(chk.verdict);

        let chk2 = resolvent_distance_check(C64::new(2.0, 0.0), &a).unwrap();
        approx(chk2.lhs, 1.0, 1e-9);
        assert!(chk2.verdict);
    }

    #[test]
    fn distance_check_jordan_strict() {
        let a = CMatrix::from_real_rows(&[vec![0.5, 1.0], vec![0.0, 0.5]]).unwrap();
        let chk = resolvent_distance_check(C64::new(1.0, 0.0), &a).unwrap();
        assert!(chk.lhs >= 1.0 - 1e-9);
        // non-normal: strictly above 1
        assert!(chk.lhs > 1.5, "lhs {}", chk.lhs);
    }

    #[test]
    fn power_sup_bound_certifies_decay() {
        let a = CMatrix::diag(&[C64::new(0.5, 0.0)]);
        let g = spectral_radius(&a).unwrap();
        // sup_j 0.9^{-j}·0.5^j = 1
        let b = g.power_sup_bound(0.9_f64.ln()).unwrap();
        assert!((1.0..=1.0 + 1e-9).contains(&b), "bound {b}");
        // theta below r: cannot certify
        assert!(g.power_sup_bound(0.4_f64.ln()).is_none());
    }
}
