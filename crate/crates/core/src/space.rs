//! Truncated realizations of the sequence spaces ℳ = {c₀⁰, ℓ∞₀, ℓᵖ₀} of
//! X-valued sequences with first entry 0.
//!
//! The state-space norm co-varies with the sequence exponent (p-norm on ℂ^d
//! under ℓᵖ₀, max-norm under ℓ∞₀/c₀⁰), so a truncated sequence norm is the
//! plain p-norm of the flattened coordinate vector. On truncations the c₀⁰
//! and ℓ∞₀ norms coincide; the vanishing-limit condition is vacuous at
//! finite length and is documented rather than modeled.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::linalg::{C64, CVector, MatrixNorm};

/// Which sequence space the analysis runs in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceSpec {
    /// ℓᵖ₀ for 1 ≤ p < ∞.
    Lp(f64),
    /// ℓ∞₀.
    LInfty,
    /// c₀⁰.
    C0,
}

impl SpaceSpec {
    pub fn validate(&self) -> Result<()> {
        if let SpaceSpec::Lp(p) = self {
            if !(p.is_finite() && *p >= 1.0) {
                return Err(CoreError::InvalidParameter(format!(
                    "lp space requires 1 <= p < inf, got {p}"
                )));
            }
        }
        Ok(())
    }

    /// Exponent used on the flattened coordinate vector.
    pub fn flat_p(&self) -> f64 {
        match self {
            SpaceSpec::Lp(p) => *p,
            SpaceSpec::LInfty | SpaceSpec::C0 => f64::INFINITY,
        }
    }

    /// State-space operator norm matching this sequence space.
    pub fn matrix_norm(&self) -> MatrixNorm {
        match self {
            SpaceSpec::Lp(p) if *p == 1.0 => MatrixNorm::One,
            SpaceSpec::Lp(p) if *p == 2.0 => MatrixNorm::Two,
            SpaceSpec::Lp(p) => MatrixNorm::Interp(*p),
            SpaceSpec::LInfty | SpaceSpec::C0 => MatrixNorm::Inf,
        }
    }

    /// Norm used for certified upper bounds (exact for p ∈ {1, ∞},
    /// Riesz–Thorin interpolation otherwise).
    pub fn upper_matrix_norm(&self) -> MatrixNorm {
        match self {
            SpaceSpec::Lp(p) if *p == 1.0 => MatrixNorm::One,
            SpaceSpec::Lp(p) => MatrixNorm::Interp(*p),
            SpaceSpec::LInfty | SpaceSpec::C0 => MatrixNorm::Inf,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SpaceSpec::Lp(p) => format!("lp:{p}"),
            SpaceSpec::LInfty => "linf".into(),
            SpaceSpec::C0 => "c0".into(),
        }
    }
}

/// Finite truncation f₀, …, f_N of an X-valued sequence with f₀ = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSequence {
    dim: usize,
    entries: Vec<CVector>,
}

impl TruncatedSequence {
    pub fn new(entries: Vec<CVector>) -> Result<Self> {
        if entries.is_empty() {
            return Err(CoreError::InvalidSequence("no entries".into()));
        }
        let dim = entries[0].dim();
        if entries.iter().any(|v| v.dim() != dim) {
            return Err(CoreError::InvalidSequence(
                "entries must share one state dimension".into(),
            ));
        }
        if !entries[0].is_zero() {
            return Err(CoreError::InvalidSequence(
                "first entry must be zero".into(),
            ));
        }
        Ok(Self { dim, entries })
    }

    /// All-zero truncation with entries 0..=n_last.
    pub fn zeros(dim: usize, n_last: usize) -> Self {
        Self {
            dim,
            entries: vec![CVector::zeros(dim); n_last + 1],
        }
    }

    /// Impulse x at index j ≥ 1, zero elsewhere.
    pub fn impulse(dim: usize, n_last: usize, j: usize, x: CVector) -> Result<Self> {
        if j == 0 || j > n_last {
            return Err(CoreError::InvalidSequence(format!(
                "impulse index must lie in 1..={n_last}, got {j}"
            )));
        }
        let mut s = Self::zeros(dim, n_last);
        s.entries[j] = x;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored entries, N + 1.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always at least the zero entry
    }

    /// Largest stored index N.
    pub fn last_index(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entry(&self, k: usize) -> &CVector {
        &self.entries[k]
    }

    pub fn entries(&self) -> &[CVector] {
        &self.entries
    }

    pub fn set_entry(&mut self, k: usize, v: CVector) -> Result<()> {
        if k == 0 && !v.is_zero() {
            return Err(CoreError::InvalidSequence(
                "first entry must stay zero".into(),
            ));
        }
        if v.dim() != self.dim {
            return Err(CoreError::Domain("state dimension mismatch".into()));
        }
        self.entries[k] = v;
        Ok(())
    }

    /// Extend with trailing zeros up to index n_last.
    pub fn zero_padded(&self, n_last: usize) -> Self {
        let mut entries = self.entries.clone();
        while entries.len() <= n_last {
            entries.push(CVector::zeros(self.dim));
        }
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|v| v.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.len() != other.len() {
            return Err(CoreError::Domain(
                "sequence shape mismatch in add".into(),
            ));
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.len() != other.len() {
            return Err(CoreError::Domain(
                "sequence shape mismatch in sub".into(),
            ));
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    /// Max entrywise modulus of the difference, for deviation checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .flat_map(|(a, b)| {
                a.entries()
                    .iter()
                    .zip(b.entries())
                    .map(|(x, y)| (x - y).norm())
            })
            .fold(0.0_f64, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|v| v.entries().iter().map(|z| z.norm()))
            .fold(0.0_f64, f64::max)
    }
}

/// Space norm of a truncation.
pub fn seq_norm(f: &TruncatedSequence, space: SpaceSpec) -> f64 {
    match space {
        SpaceSpec::Lp(p) if p == 1.0 => f
            .entries()
            .iter()
            .flat_map(|v| v.entries().iter().map(|z| z.norm()))
            .sum(),
        SpaceSpec::Lp(p) if p == 2.0 => f
            .entries()
            .iter()
            .map(|v| v.entries().iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt(),
        SpaceSpec::Lp(p) => f
            .entries()
            .iter()
            .flat_map(|v| v.entries().iter().map(|z| z.norm().powf(p)))
            .sum::<f64>()
            .powf(1.0 / p),
        SpaceSpec::LInfty | SpaceSpec::C0 => f.max_abs(),
    }
}

/// Duality pairing Σ_k ⟨h_k, f_k⟩ with the conjugate-linear Euclidean
/// pairing on ℂ^d standing in for X*.
pub fn dual_pair(h: &TruncatedSequence, f: &TruncatedSequence) -> Result<C64> {
    if h.dim() != f.dim() || h.len() != f.len() {
        return Err(CoreError::Domain(
            "dual_pair requires matching dimension and length".into(),
        ));
    }
    Ok(h.entries()
        .iter()
        .zip(f.entries())
        .map(|(hk, fk)| hk.dot(fk))
        .sum())
}

/// Deterministic unit-norm sample: complex Gaussian entries at indices
/// 1..=N, rescaled to norm 1 in the requested space.
pub fn random_unit(space: SpaceSpec, dim: usize, n_last: usize, seed: u64) -> Result<TruncatedSequence> {
    if n_last < 1 {
        return Err(CoreError::InvalidParameter(
            "random_unit needs at least index 1".into(),
        ));
    }
    space.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = TruncatedSequence::zeros(dim, n_last);
    for k in 1..=n_last {
        let v = CVector::new(
            (0..dim)
                .map(|_| {
                    // Box-Muller pair
                    let u1: f64 = rng.gen::<f64>().max(1e-300);
                    let u2: f64 = rng.gen();
                    let r = (-2.0 * u1.ln()).sqrt();
                    C64::new(
                        r * (std::f64::consts::TAU * u2).cos(),
                        r * (std::f64::consts::TAU * u2).sin(),
                    )
                })
                .collect(),
        )?;
        f.set_entry(k, v)?;
    }
    let n = seq_norm(&f, space);
    if n < 1e-300 {
        // essentially impossible; fall back to an impulse
        f = TruncatedSequence::impulse(dim, n_last, 1, CVector::basis(dim, 0))?;
        return Ok(f);
    }
    Ok(f.scale(C64::new(1.0 / n, 0.0)))
}
