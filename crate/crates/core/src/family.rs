//! Discrete evolution families U(n, m) generated by a one-step sequence
//! {Aₙ} with a finite prefix and a constant or periodic tail.
//!
//! The prefix+tail encoding is what makes the infinite suprema of the theory
//! (exponential bounds, growth bound, semigroup power norms) reducible to
//! finite computations with certified geometric caps: beyond the prefix the
//! family is periodic, so every long product factors through monodromy
//! powers whose norms are controlled by Gelfand bounds.

use std::sync::Mutex;

use crate::eigen;
use crate::error::{CoreError, Result};
use crate::linalg::{C64, CMatrix, CVector, GelfandData, MatrixNorm, gelfand};
use crate::space::TruncatedSequence;

/// Rule for Aₙ past the prefix.
#[derive(Debug, Clone)]
pub enum Tail {
    Constant(CMatrix),
    Periodic(Vec<CMatrix>),
}

/// Finite encoding of an infinite generator sequence {Aₙ}.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    dim: usize,
    prefix: Vec<CMatrix>,
    tail: Tail,
}

impl GeneratorSpec {
    pub fn new(dim: usize, prefix: Vec<CMatrix>, tail: Tail) -> Result<Self> {
        if dim == 0 {
            return Err(CoreError::InvalidParameter(
                "state dimension must be at least 1".into(),
            ));
        }
        match &tail {
            Tail::Constant(t) => {
                if t.dim() != dim {
                    return Err(CoreError::InvalidParameter(
                        "tail matrix dimension mismatch".into(),
                    ));
                }
            }
            Tail::Periodic(ms) => {
                if ms.is_empty() {
                    return Err(CoreError::InvalidParameter(
                        "periodic tail needs at least one matrix".into(),
                    ));
                }
                if ms.iter().any(|m| m.dim() != dim) {
                    return Err(CoreError::InvalidParameter(
                        "tail matrix dimension mismatch".into(),
                    ));
                }
            }
        }
        if prefix.iter().any(|m| m.dim() != dim) {
            return Err(CoreError::InvalidParameter(
                "prefix matrix dimension mismatch".into(),
            ));
        }
        Ok(Self { dim, prefix, tail })
    }

    /// Autonomous family U(n, m) = T^{n-m}.
    pub fn autonomous(t: CMatrix) -> Self {
        Self {
            dim: t.dim(),
            prefix: Vec::new(),
            tail: Tail::Constant(t),
        }
    }

    /// Scalar family from step moduli (1x1 complex matrices).
    pub fn scalar_periodic(prefix: &[f64], tail: &[f64]) -> Result<Self> {
        let pf = prefix
            .iter()
            .map(|&g| CMatrix::scalar(C64::new(g, 0.0)))
            .collect();
        let tl: Vec<CMatrix> = tail
            .iter()
            .map(|&g| CMatrix::scalar(C64::new(g, 0.0)))
            .collect();
        let tail = if tl.len() == 1 {
            Tail::Constant(tl.into_iter().next().unwrap())
        } else {
            Tail::Periodic(tl)
        };
        Self::new(1, pf, tail)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn prefix(&self) -> &[CMatrix] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn period(&self) -> usize {
        match &self.tail {
            Tail::Constant(_) => 1,
            Tail::Periodic(ms) => ms.len(),
        }
    }

    /// Tail step at tail-index i, i.e. A_{L+i}.
    pub fn tail_step(&self, i: usize) -> &CMatrix {
        match &self.tail {
            Tail::Constant(t) => t,
            Tail::Periodic(ms) => &ms[i % ms.len()],
        }
    }

    /// Aₙ for any n ≥ 0.
    pub fn step(&self, n: usize) -> &CMatrix {
        if n < self.prefix.len() {
            &self.prefix[n]
        } else {
            self.tail_step(n - self.prefix.len())
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.dim == 1
    }

    /// No prefix, constant tail: U(n, m) = T^{n-m}.
    pub fn is_autonomous(&self) -> bool {
        self.prefix.is_empty() && matches!(self.tail, Tail::Constant(_))
    }
}

/// Matrix with a separated log-scale factor, representing mat·e^{log}.
/// Exact zero is stored as (zero matrix, log = 0).
#[derive(Debug, Clone)]
struct Scaled {
    mat: CMatrix,
    log: f64,
}

impl Scaled {
    fn from(mat: CMatrix) -> Self {
        Self { mat, log: 0.0 }.renormalized()
    }

    fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim),
            log: 0.0,
        }
    }

    fn renormalized(self) -> Self {
        let n = self.mat.max_abs();
        if n == 0.0 {
            return Self {
                mat: self.mat,
                log: 0.0,
            };
        }
        Self {
            mat: self.mat.scale(C64::new(1.0 / n, 0.0)),
            log: self.log + n.ln(),
        }
    }

    fn mul(&self, other: &Scaled) -> Scaled {
        Scaled {
            mat: self.mat.mul(&other.mat),
            log: self.log + other.log,
        }
        .renormalized()
    }

    fn lognorm(&self, norm: MatrixNorm) -> f64 {
        let n = norm.upper(&self.mat);
        if n == 0.0 {
            f64::NEG_INFINITY
        } else {
            n.ln() + self.log
        }
    }
}

fn scaled_pow(base: &CMatrix, mut t: u64) -> Scaled {
    let mut acc = Scaled::identity(base.dim());
    let mut sq = Scaled::from(base.clone());
    while t > 0 {
        if t & 1 == 1 {
            acc = acc.mul(&sq);
        }
        t >>= 1;
        if t > 0 {
            sq = sq.mul(&sq);
        }
    }
    acc
}

/// A per-step exponential bound ‖U(n, m)‖ ≤ coeff·e^{omega·(n-m)} over Δ.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialBound {
    pub omega: f64,
    /// The constant M_ω ≥ 1, certified as an upper bound on the supremum.
    pub coeff: f64,
}

/// Outcome of asking for an exponential bound at a given rate.
#[derive(Debug, Clone)]
pub enum OmegaVerdict {
    Bounded(ExponentialBound),
    /// e^ω lies at or below a certified spectral lower bound: no finite M_ω.
    Unbounded { r_step_lower: f64, threshold: f64 },
    /// e^ω falls between the available lower and upper spectral bounds.
    Inconclusive { r_step_lower: f64, r_step_upper: f64 },
}

/// ω₀(𝒰) with its certified bracket, in log-units per step.
#[derive(Debug, Clone, Copy)]
pub struct GrowthBound {
    /// Best estimate (eigenvalue-based when dim ≤ 64); -inf for nilpotent
    /// monodromy.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub r_step_lower: f64,
    pub r_step_upper: f64,
}

/// Two-sided enclosure of r(𝒯(1)) from semigroup power norms.
#[derive(Debug, Clone)]
pub struct SemigroupRadiusBracket {
    pub lower: f64,
    pub upper: f64,
    /// (j, ‖𝒯(j)‖^{1/j}) along the doubling schedule.
    pub evaluations: Vec<(u64, f64)>,
}

/// The two-parameter family U(n, m) derived from a GeneratorSpec, with
/// cached prefix/tail products and monodromy spectral data.
#[derive(Debug)]
pub struct EvolutionFamily {
    spec: GeneratorSpec,
    /// prefix_cols[m][k] = U(m+k, m) for m + k ≤ L.
    prefix_cols: Vec<Vec<CMatrix>>,
    /// tail_cols[φ][k] = product of k tail steps starting at phase φ,
    /// extended on demand behind a lock so readers stay consistent.
    tail_cols: Vec<Mutex<Vec<CMatrix>>>,
    /// monodromies[φ] = product of one full period starting at phase φ.
    monodromies: Vec<CMatrix>,
}

impl EvolutionFamily {
    pub fn new(spec: GeneratorSpec) -> Self {
        let l = spec.prefix_len();
        let q = spec.period();
        let mut prefix_cols = Vec::with_capacity(l);
        for m in 0..l {
            let mut col = vec![CMatrix::identity(spec.dim())];
            for k in 0..(l - m) {
                let next = spec.step(m + k).mul(col.last().unwrap());
                col.push(next);
            }
            prefix_cols.push(col);
        }
        let tail_cols = (0..q)
            .map(|_| Mutex::new(vec![CMatrix::identity(spec.dim())]))
            .collect();
        let monodromies = (0..q)
            .map(|phase| {
                let mut p = CMatrix::identity(spec.dim());
                for i in 0..q {
                    p = spec.tail_step(phase + i).mul(&p);
                }
                p
            })
            .collect();
        Self {
            spec,
            prefix_cols,
            tail_cols,
            monodromies,
        }
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// Monodromy matrix for a given tail phase.
    pub fn monodromy(&self, phase: usize) -> &CMatrix {
        &self.monodromies[phase % self.spec.period()]
    }

    /// Product of k tail steps starting at phase φ.
    fn tail_product(&self, phase: usize, k: usize) -> CMatrix {
        let mut col = self.tail_cols[phase % self.spec.period()]
            .lock()
            .expect("tail cache poisoned");
        while col.len() <= k {
            let len = col.len();
            let next = self
                .spec
                .tail_step(phase + len - 1)
                .mul(col.last().unwrap());
            col.push(next);
        }
        col[k].clone()
    }

    /// U(n, m) = A_{n-1}···A_m for n ≥ m, identity on the diagonal.
    pub fn propagator(&self, n: usize, m: usize) -> Result<CMatrix> {
        if n < m {
            return Err(CoreError::Domain(format!(
                "propagator needs n >= m, got ({n}, {m})"
            )));
        }
        if n == m {
            return Ok(CMatrix::identity(self.spec.dim()));
        }
        let l = self.spec.prefix_len();
        if m >= l {
            return Ok(self.tail_product(m - l, n - m));
        }
        if n <= l {
            return Ok(self.prefix_cols[m][n - m].clone());
        }
        let into_tail = self.tail_product(0, n - l);
        Ok(into_tail.mul(&self.prefix_cols[m][l - m]))
    }

    /// Solution of x_{n+1} = Aₙxₙ + f_{n+1}, x₀ = 0, which is the
    /// convolution xₙ = Σ_{k≤n} U(n, k)f_k. This is the shared
    /// implementation behind `conv::apply_convolution`.
    pub fn solve_cauchy(&self, f: &TruncatedSequence) -> Result<TruncatedSequence> {
        if f.dim() != self.spec.dim() {
            return Err(CoreError::Domain(
                "sequence dimension does not match the family".into(),
            ));
        }
        if !f.entry(0).is_zero() {
            return Err(CoreError::InvalidSequence(
                "first entry must be zero".into(),
            ));
        }
        let mut out = TruncatedSequence::zeros(self.spec.dim(), f.last_index());
        let mut x = CVector::zeros(self.spec.dim());
        for n in 1..=f.last_index() {
            x = self.spec.step(n - 1).mul_vec(&x).add(f.entry(n));
            out.set_entry(n, x.clone())?;
        }
        Ok(out)
    }

    /// Scaled U(n, m) suitable for huge gaps n - m (norms in log scale).
    fn scaled_propagator(&self, gap: u64, m: usize) -> Scaled {
        let l = self.spec.prefix_len() as u64;
        let q = self.spec.period() as u64;
        let m64 = m as u64;
        if m64 >= l {
            let phase = ((m64 - l) % q) as usize;
            return self.scaled_tail_product(phase, gap);
        }
        if m64 + gap <= l {
            return Scaled::from(self.prefix_cols[m][gap as usize].clone());
        }
        let to_tail = Scaled::from(self.prefix_cols[m][(l - m64) as usize].clone());
        let rest = self.scaled_tail_product(0, gap - (l - m64));
        rest.mul(&to_tail)
    }

    /// Scaled product of k tail steps starting at phase φ, via monodromy
    /// powers: C_φ[s + tq] = C_φ[s]·P_φ^t.
    fn scaled_tail_product(&self, phase: usize, k: u64) -> Scaled {
        let q = self.spec.period() as u64;
        let s = (k % q) as usize;
        let t = k / q;
        let head = Scaled::from(self.tail_product(phase, s));
        if t == 0 {
            return head;
        }
        let mono = scaled_pow(&self.monodromies[phase], t);
        head.mul(&mono)
    }

    /// ‖𝒯(j)‖ = sup_{k≥j} ‖U(k, k-j)‖: exactly a finite max over prefix
    /// starts and tail phases, since the tail is periodic in the start index.
    pub fn semigroup_power_norm(&self, j: u64, norm: MatrixNorm) -> f64 {
        self.semigroup_power_lognorm(j, norm).exp()
    }

    /// ln‖𝒯(j)‖, safe far outside f64 range.
    pub fn semigroup_power_lognorm(&self, j: u64, norm: MatrixNorm) -> f64 {
        if j == 0 {
            return 0.0;
        }
        let l = self.spec.prefix_len();
        let q = self.spec.period();
        let mut best = f64::NEG_INFINITY;
        for m in 0..l {
            let v = self.scaled_propagator(j, m).lognorm(norm);
            best = best.max(v);
        }
        for phase in 0..q {
            let v = self.scaled_tail_product(phase, j).lognorm(norm);
            best = best.max(v);
        }
        best
    }

    /// Bracket for r(𝒯(1)) from ‖𝒯(j)‖^{1/j} along j = 1, 2, 4, …: each
    /// value is a certified upper bound; no finite j can certify a lower
    /// bound from norms alone, so the lower end comes from the monodromy
    /// eigenvalues when the dimension allows, and otherwise from the last
    /// (empirically converged) iterate. Exact collapse for scalar tails.
    pub fn semigroup_spectral_radius(&self, norm: MatrixNorm) -> SemigroupRadiusBracket {
        let mut evaluations = Vec::new();
        let mut prev_ln = f64::NAN;
        let mut min_g = f64::INFINITY;
        // nilpotent products only vanish once j ≥ dim·period
        let horizon = self.spec.dim() * self.spec.period();
        let min_k = (usize::BITS - horizon.leading_zeros()) + 1;
        for k in 0..=30u32 {
            let j = 1u64 << k;
            let ln_norm = self.semigroup_power_lognorm(j, norm);
            if ln_norm == f64::NEG_INFINITY {
                evaluations.push((j, 0.0));
                return SemigroupRadiusBracket {
                    lower: 0.0,
                    upper: 0.0,
                    evaluations,
                };
            }
            let ln_g = ln_norm / j as f64;
            let g = ln_g.exp();
            evaluations.push((j, g));
            min_g = min_g.min(g);
            if k >= min_k && !prev_ln.is_nan() && (ln_g - prev_ln).abs() < 1e-9 {
                break;
            }
            prev_ln = ln_g;
        }
        let last = evaluations.last().map(|&(_, g)| g).unwrap_or(0.0);
        let mut lower = last.min(min_g);
        if self.spec.dim() <= eigen::EIGEN_DIM_CAP {
            if let Ok(r_mono) = eigen::spectral_radius_from_eigen(&self.monodromies[0]) {
                let per_step = r_mono.powf(1.0 / self.spec.period() as f64);
                lower = lower.min(per_step);
            }
        }
        SemigroupRadiusBracket {
            lower,
            upper: min_g,
            evaluations,
        }
    }

    /// ω₀(𝒰) with bracket: ln r(monodromy)/period, eigenvalue-backed lower
    /// end when dim ≤ 64, Gelfand upper bounds always.
    pub fn growth_bound_oracle(&self) -> Result<GrowthBound> {
        let q = self.spec.period() as f64;
        let p0 = &self.monodromies[0];
        let g = gelfand(p0, MatrixNorm::Two, 40)?;
        let r_ub = g.r_upper();
        let r_lb = if self.spec.dim() <= eigen::EIGEN_DIM_CAP {
            eigen::spectral_radius_from_eigen(p0)?.min(r_ub)
        } else {
            0.0
        };
        let per_step = |r: f64| {
            if r == 0.0 {
                f64::NEG_INFINITY
            } else {
                r.ln() / q
            }
        };
        let value = if self.spec.dim() <= eigen::EIGEN_DIM_CAP {
            per_step(r_lb)
        } else {
            per_step(g.r_estimate())
        };
        Ok(GrowthBound {
            value,
            lower: per_step(r_lb),
            upper: per_step(r_ub),
            r_step_lower: if r_lb == 0.0 { 0.0 } else { (r_lb.ln() / q).exp() },
            r_step_upper: if r_ub == 0.0 { 0.0 } else { (r_ub.ln() / q).exp() },
        })
    }

    /// Certified M_ω with sup_{(n,m)∈Δ} e^{-ω(n-m)}‖U(n, m)‖ ≤ M_ω, or the
    /// verdict that no such constant exists. Exact for scalar families.
    pub fn exponential_bound(&self, omega: f64, norm: MatrixNorm) -> Result<OmegaVerdict> {
        if !omega.is_finite() {
            return Err(CoreError::InvalidParameter(
                "omega must be finite".into(),
            ));
        }
        if self.spec.is_scalar() {
            return Ok(self.exponential_bound_scalar(omega));
        }
        self.exponential_bound_general(omega, norm)
    }

    fn exponential_bound_scalar(&self, omega: f64) -> OmegaVerdict {
        let l = self.spec.prefix_len();
        let q = self.spec.period();
        let rho: f64 = (0..q)
            .map(|i| self.spec.tail_step(i).entry(0, 0).norm())
            .product();
        let theta = (omega * q as f64).exp();
        if rho > theta * (1.0 + 1e-12) {
            return OmegaVerdict::Unbounded {
                r_step_lower: rho.powf(1.0 / q as f64),
                threshold: omega.exp(),
            };
        }
        // per-phase tail sup: values repeat along full periods with the
        // factor rho/theta ≤ 1, so the max over one period is the sup
        let mut best = 1.0_f64;
        for phase in 0..q {
            let mut prod = 1.0_f64;
            for s in 0..q {
                let v = prod * (-omega * s as f64).exp();
                best = best.max(v);
                prod *= self.spec.tail_step(phase + s).entry(0, 0).norm();
            }
        }
        let tail_sup_phase0 = {
            let mut sup = 1.0_f64;
            let mut prod = 1.0_f64;
            for s in 0..q {
                sup = sup.max(prod * (-omega * s as f64).exp());
                prod *= self.spec.tail_step(s).entry(0, 0).norm();
            }
            sup
        };
        // prefix pairs and the crossing products, all exact in moduli
        for m in 0..l {
            let mut prod = 1.0_f64;
            for n in m..l {
                prod *= self.spec.step(n).entry(0, 0).norm();
                let gap = (n + 1 - m) as f64;
                best = best.max(prod * (-omega * gap).exp());
                if n + 1 == l {
                    best = best.max(prod * (-omega * gap).exp() * tail_sup_phase0);
                }
            }
        }
        OmegaVerdict::Bounded(ExponentialBound {
            omega,
            coeff: best,
        })
    }

    fn exponential_bound_general(&self, omega: f64, norm: MatrixNorm) -> Result<OmegaVerdict> {
        let l = self.spec.prefix_len();
        let q = self.spec.period();
        let d = self.spec.dim();
        let ln_theta = omega * q as f64;

        let gelfand_data: Vec<GelfandData> = self
            .monodromies
            .iter()
            .map(|p| gelfand(p, norm, 40))
            .collect::<Result<_>>()?;

        // certify sup_t e^{-ωqt}‖P_φ^t‖ < ∞ for every phase, or give up
        if gelfand_data
            .iter()
            .any(|g| g.power_sup_bound(ln_theta).is_none())
        {
            let r_ub = gelfand_data[0].r_upper().powf(1.0 / q as f64);
            let r_lb = if d <= eigen::EIGEN_DIM_CAP {
                eigen::spectral_radius_from_eigen(&self.monodromies[0])?
                    .powf(1.0 / q as f64)
                    .min(r_ub)
            } else {
                0.0
            };
            if r_lb > omega.exp() * (1.0 + 1e-12) {
                return Ok(OmegaVerdict::Unbounded {
                    r_step_lower: r_lb,
                    threshold: omega.exp(),
                });
            }
            return Ok(OmegaVerdict::Inconclusive {
                r_step_lower: r_lb,
                r_step_upper: r_ub,
            });
        }

        // direct window per phase, then a certified cap past the window
        let window = (2 * q).max((2048 / d).clamp(16, 128));
        let mut best = 1.0_f64;
        let mut tail_sups = vec![0.0_f64; q];
        for phase in 0..q {
            let mut direct_max = f64::NEG_INFINITY;
            let mut cur = Scaled::identity(d);
            let mut head_max = vec![f64::NEG_INFINITY; q]; // ln of e^{-ωs}‖C_φ[s]‖
            for k in 0..window {
                if k < q {
                    head_max[k] = cur.lognorm(norm) - omega * k as f64;
                }
                let v = cur.lognorm(norm) - omega * k as f64;
                direct_max = direct_max.max(v);
                cur = Scaled::from(self.spec.tail_step(phase + k).clone()).mul(&cur);
            }
            let t_min = ((window as u64).saturating_sub(q as u64)) / q as u64 + 1;
            let pow_tail = gelfand_data[phase]
                .power_sup_bound_tail(ln_theta, t_min)
                .unwrap_or(f64::INFINITY);
            let head_best = head_max
                .iter()
                .fold(f64::NEG_INFINITY, |a, &b| a.max(b))
                .exp();
            let cap = head_best * pow_tail;
            let sup = direct_max.exp().max(cap);
            tail_sups[phase] = sup;
            best = best.max(sup);
        }

        // prefix pairs (n ≤ L) and the crossing split through U(L, m)
        for m in 0..l {
            for k in 1..=(l - m) {
                let v = norm.upper(&self.prefix_cols[m][k]);
                let scaled = v * (-omega * k as f64).exp();
                best = best.max(scaled);
                if m + k == l {
                    best = best.max(scaled * tail_sups[0]);
                }
            }
        }

        Ok(OmegaVerdict::Bounded(ExponentialBound {
            omega,
            coeff: best,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::op_norm_inf;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn scalar_const(gamma: f64) -> EvolutionFamily {
        EvolutionFamily::new(GeneratorSpec::scalar_periodic(&[], &[gamma]).unwrap())
    }

    fn scalar_two_eighth() -> EvolutionFamily {
        EvolutionFamily::new(GeneratorSpec::scalar_periodic(&[], &[2.0, 0.125]).unwrap())
    }

    #[test]
    fn propagator_identity_on_diagonal() {
        let fam = scalar_const(0.5);
        let u = fam.propagator(7, 7).unwrap();
        assert_eq!(u, CMatrix::identity(1));
    }

    #[test]
    fn propagator_scalar_powers() {
        let fam = scalar_const(0.5);
        approx(fam.propagator(5, 2).unwrap().entry(0, 0).re, 0.125, 1e-15);
    }

    #[test]
    fn propagator_periodic_products() {
        let fam = scalar_two_eighth();
        approx(fam.propagator(2, 0).unwrap().entry(0, 0).re, 0.25, 1e-15);
        approx(fam.propagator(3, 1).unwrap().entry(0, 0).re, 0.25, 1e-15);
        approx(fam.propagator(3, 0).unwrap().entry(0, 0).re, 0.5, 1e-15);
    }

    #[test]
    fn propagator_rejects_reversed_pair() {
        let fam = scalar_const(0.5);
        assert!(fam.propagator(1, 2).is_err());
    }

    #[test]
    fn propagator_with_prefix_crosses_into_tail() {
        let spec = GeneratorSpec::scalar_periodic(&[3.0, 0.2], &[0.5]).unwrap();
        let fam = EvolutionFamily::new(spec);
        // U(4, 0) = 0.5·0.5·0.2·3.0
        approx(fam.propagator(4, 0).unwrap().entry(0, 0).re, 0.15, 1e-15);
        // U(2, 1) = 0.2 fully inside the prefix
        approx(fam.propagator(2, 1).unwrap().entry(0, 0).re, 0.2, 1e-15);
    }

    #[test]
    fn evolution_law_matches_direct_products() {
        let spec = GeneratorSpec::new(
            2,
            vec![CMatrix::from_real_rows(&[vec![0.1, 1.0], vec![0.0, 0.4]]).unwrap()],
            Tail::Periodic(vec![
                CMatrix::from_real_rows(&[vec![0.5, 0.2], vec![0.1, 0.3]]).unwrap(),
                CMatrix::from_real_rows(&[vec![0.0, 0.7], vec![0.6, 0.1]]).unwrap(),
            ]),
        )
        .unwrap();
        let fam = EvolutionFamily::new(spec);
        for &(n, p, m) in &[(9usize, 5usize, 2usize), (12, 12, 3), (7, 4, 4), (20, 11, 0)] {
            let whole = fam.propagator(n, m).unwrap();
            let split = fam
                .propagator(n, p)
                .unwrap()
                .mul(&fam.propagator(p, m).unwrap());
            assert!(whole.sub(&split).max_abs() < 1e-12);
        }
    }

    #[test]
    fn solve_cauchy_zero_input() {
        let fam = scalar_const(0.5);
        let f = TruncatedSequence::zeros(1, 8);
        let x = fam.solve_cauchy(&f).unwrap();
        assert_eq!(x.max_abs(), 0.0);
    }

    #[test]
    fn solve_cauchy_impulse_response() {
        let fam = scalar_const(0.5);
        let f = TruncatedSequence::impulse(1, 6, 1, CVector::from_real(&[1.0])).unwrap();
        let x = fam.solve_cauchy(&f).unwrap();
        assert_eq!(x.entry(0).entries()[0].re, 0.0);
        for n in 1..=6 {
            approx(
                x.entry(n).entries()[0].re,
                0.5_f64.powi(n as i32 - 1),
                1e-15,
            );
        }
    }

    #[test]
    fn solve_cauchy_satisfies_recurrence() {
        let spec = GeneratorSpec::new(
            2,
            vec![],
            Tail::Periodic(vec![
                CMatrix::from_real_rows(&[vec![0.5, 0.2], vec![0.1, 0.3]]).unwrap(),
                CMatrix::from_real_rows(&[vec![0.0, 0.7], vec![0.6, 0.1]]).unwrap(),
            ]),
        )
        .unwrap();
        let fam = EvolutionFamily::new(spec);
        let f = crate::space::random_unit(crate::space::SpaceSpec::Lp(2.0), 2, 16, 5).unwrap();
        let x = fam.solve_cauchy(&f).unwrap();
        for n in 0..16 {
            let lhs = x.entry(n + 1);
            let rhs = fam.spec().step(n).mul_vec(x.entry(n)).add(f.entry(n + 1));
            assert!(lhs.sub(&rhs).norm2() < 1e-12);
        }
    }

    #[test]
    fn exponential_bound_scalar_examples() {
        let fam = scalar_const(0.5);
        match fam.exponential_bound(0.5_f64.ln(), MatrixNorm::Two).unwrap() {
            OmegaVerdict::Bounded(b) => approx(b.coeff, 1.0, 1e-12),
            other => panic!("expected bounded, got {other:?}"),
        }
        match fam.exponential_bound(0.0, MatrixNorm::Two).unwrap() {
            OmegaVerdict::Bounded(b) => approx(b.coeff, 1.0, 1e-12),
            other => panic!("expected bounded, got {other:?}"),
        }
    }

    #[test]
    fn exponential_bound_periodic_phase_max() {
        let fam = scalar_two_eighth();
        match fam.exponential_bound(0.5_f64.ln(), MatrixNorm::Two).unwrap() {
            OmegaVerdict::Bounded(b) => approx(b.coeff, 4.0, 1e-12),
            other => panic!("expected bounded, got {other:?}"),
        }
    }

    #[test]
    fn exponential_bound_brute_force_certificate() {
        let specs = vec![
            GeneratorSpec::scalar_periodic(&[5.0], &[0.5]).unwrap(),
            GeneratorSpec::scalar_periodic(&[], &[2.0, 0.125]).unwrap(),
            GeneratorSpec::new(
                2,
                vec![],
                Tail::Constant(
                    CMatrix::from_real_rows(&[vec![0.5, 1.0], vec![0.0, 0.5]]).unwrap(),
                ),
            )
            .unwrap(),
        ];
        for spec in specs {
            let fam = EvolutionFamily::new(spec);
            let omega = -0.2;
            let verdict = fam.exponential_bound(omega, MatrixNorm::Inf).unwrap();
            let b = match verdict {
                OmegaVerdict::Bounded(b) => b,
                other => panic!("expected bounded, got {other:?}"),
            };
            for m in 0..=60usize {
                for n in m..=m + 60 {
                    let u = fam.propagator(n, m).unwrap();
                    let v = op_norm_inf(&u) * (-omega * (n - m) as f64).exp();
                    assert!(
                        v <= b.coeff * (1.0 + 1e-9),
                        "violation at ({n},{m}): {v} > {}",
                        b.coeff
                    );
                }
            }
        }
    }

    #[test]
    fn exponential_bound_unbounded_below_radius() {
        let fam = scalar_const(0.5);
        match fam.exponential_bound(0.4_f64.ln(), MatrixNorm::Two).unwrap() {
            OmegaVerdict::Unbounded { r_step_lower, .. } => approx(r_step_lower, 0.5, 1e-12),
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn exponential_bound_inconclusive_at_spectral_boundary() {
        // d > 1 at e^ω = r exactly: the geometric cap cannot certify and the
        // eigenvalue lower bound cannot refute
        let spec = GeneratorSpec::new(
            2,
            vec![],
            Tail::Constant(CMatrix::diag(&[
                crate::linalg::C64::new(0.5, 0.0),
                crate::linalg::C64::new(0.3, 0.0),
            ])),
        )
        .unwrap();
        let fam = EvolutionFamily::new(spec);
        match fam.exponential_bound(0.5_f64.ln(), MatrixNorm::Two).unwrap() {
            OmegaVerdict::Inconclusive {
                r_step_lower,
                r_step_upper,
            } => {
                approx(r_step_lower, 0.5, 1e-9);
                approx(r_step_upper, 0.5, 1e-9);
            }
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn growth_bound_scalar_constant() {
        let fam = scalar_const(0.5);
        let g = fam.growth_bound_oracle().unwrap();
        approx(g.value, 0.5_f64.ln(), 1e-12);
        approx(g.lower, 0.5_f64.ln(), 1e-12);
        approx(g.upper, 0.5_f64.ln(), 1e-12);
    }

    #[test]
    fn growth_bound_periodic_monodromy() {
        let fam = scalar_two_eighth();
        let g = fam.growth_bound_oracle().unwrap();
        approx(g.value, 0.5_f64.ln(), 1e-12);
    }

    #[test]
    fn growth_bound_nilpotent_is_minus_infinity() {
        let spec = GeneratorSpec::new(
            2,
            vec![],
            Tail::Constant(CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()),
        )
        .unwrap();
        let fam = EvolutionFamily::new(spec);
        let g = fam.growth_bound_oracle().unwrap();
        assert_eq!(g.value, f64::NEG_INFINITY);
        assert_eq!(g.upper, f64::NEG_INFINITY);
    }

    #[test]
    fn growth_bound_brute_force_cross_check() {
        // (1/k)·ln max_m ‖U(m+k, m)‖ at k = 200 sits within ln-transient/k of ω₀
        let specs = vec![
            GeneratorSpec::scalar_periodic(&[], &[0.5]).unwrap(),
            GeneratorSpec::scalar_periodic(&[], &[2.0, 0.125]).unwrap(),
            GeneratorSpec::scalar_periodic(&[4.0], &[0.7]).unwrap(),
            GeneratorSpec::new(
                2,
                vec![],
                Tail::Constant(
                    CMatrix::from_real_rows(&[vec![0.5, 1.0], vec![0.0, 0.5]]).unwrap(),
                ),
            )
            .unwrap(),
        ];
        for spec in specs {
            let fam = EvolutionFamily::new(spec);
            let w0 = fam.growth_bound_oracle().unwrap().value;
            let k = 200usize;
            let mut best = f64::NEG_INFINITY;
            for m in 0..(fam.spec().prefix_len() + fam.spec().period()).max(1) {
                let u = fam.propagator(m + k, m).unwrap();
                best = best.max(op_norm_inf(&u).ln() / k as f64);
            }
            assert!((best - w0).abs() < 0.06, "{best} vs {w0}");
        }
    }

    #[test]
    fn semigroup_power_norm_examples() {
        let fam = scalar_const(0.5);
        approx(fam.semigroup_power_norm(0, MatrixNorm::Two), 1.0, 0.0);
        for j in 1..=6u64 {
            approx(
                fam.semigroup_power_norm(j, MatrixNorm::Two),
                0.5_f64.powi(j as i32),
                1e-12,
            );
        }
        let per = scalar_two_eighth();
        approx(per.semigroup_power_norm(1, MatrixNorm::Two), 2.0, 1e-12);
        approx(per.semigroup_power_norm(2, MatrixNorm::Two), 0.25, 1e-12);
    }

    #[test]
    fn semigroup_power_norm_with_prefix() {
        // prefix start contributes ‖U(1+j-1 … )‖; check against propagators
        let spec = GeneratorSpec::scalar_periodic(&[3.0], &[0.5]).unwrap();
        let fam = EvolutionFamily::new(spec);
        for j in 1..=5u64 {
            let mut want = f64::NEG_INFINITY;
            for m in 0..=40usize {
                let u = fam.propagator(m + j as usize, m).unwrap();
                want = want.max(op_norm_inf(&u));
            }
            approx(fam.semigroup_power_norm(j, MatrixNorm::Inf), want, 1e-12);
        }
    }

    #[test]
    fn semigroup_radius_scalar_collapses() {
        let fam = scalar_const(0.5);
        let br = fam.semigroup_spectral_radius(MatrixNorm::Two);
        approx(br.lower, 0.5, 1e-12);
        approx(br.upper, 0.5, 1e-12);
    }

    #[test]
    fn semigroup_radius_periodic_contains_growth_rate() {
        let fam = scalar_two_eighth();
        let br = fam.semigroup_spectral_radius(MatrixNorm::Two);
        assert!(br.lower <= 0.5 + 1e-12 && 0.5 <= br.upper + 1e-12);
        approx(br.upper, 0.5, 1e-9);
    }

    #[test]
    fn semigroup_radius_nilpotent_is_zero() {
        let spec = GeneratorSpec::new(
            2,
            vec![],
            Tail::Constant(CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()),
        )
        .unwrap();
        let fam = EvolutionFamily::new(spec);
        let br = fam.semigroup_spectral_radius(MatrixNorm::Two);
        assert_eq!(br.upper, 0.0);
    }

    #[test]
    fn semigroup_submultiplicativity() {
        let fam = scalar_two_eighth();
        for j in 1..=4u64 {
            for k in 1..=4u64 {
                let lhs = fam.semigroup_power_norm(j + k, MatrixNorm::Inf);
                let rhs = fam.semigroup_power_norm(j, MatrixNorm::Inf)
                    * fam.semigroup_power_norm(k, MatrixNorm::Inf);
                assert!(lhs <= rhs + 1e-12);
            }
        }
    }
}
