//! The certification engine: assembles growth-bound, convolution-norm,
//! disk, resolvent, Datko and summed-power checks into one certificate.
//!
//! Interval-valued inequalities are verified at the non-falsification
//! corner (ω₀-lower × c-upper): a theorem can only be reported violated if
//! even the corner most favorable to it fails, so truncation slack never
//! produces a false THEOREM_VIOLATION.

use rayon::prelude::*;

use crate::config::AnalysisConfig;
use crate::conv::{
    NormBracket, Schedule, UpperProvenance, conv_norm_bracket, conv_norm_lower, conv_norm_upper,
    u1_bracket,
};
use crate::eigen;
use crate::error::{CoreError, Result};
use crate::family::{EvolutionFamily, ExponentialBound, GeneratorSpec, OmegaVerdict};
use crate::linalg::{CMatrix, CVector, MatrixNorm, POWER_ITER_CAP, POWER_ITER_TOL, gelfand};
use crate::report::{
    BracketReport, CBracketReport, CertificateReport, PowerSumReport, DatkoRowReport,
    REPORT_SCHEMA_VERSION, ResolventReport, GrowthProductReport, DiskReport,
};
use crate::resolvent::{UnimodularGrid, disk_bound_check, resolvent_circle_bound};
use crate::space::SpaceSpec;

/// Default unimodular grid size for the resolvent surface.
pub const RESOLVENT_GRID: usize = 64;
/// Truncation length for resolvent estimates inside certify.
pub const RESOLVENT_TRUNCATION: usize = 64;
/// Running Datko sums past this magnitude count as divergence.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CertifiedStable,
    NotCertified,
    TheoremViolation,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::CertifiedStable => "CERTIFIED_STABLE",
            Verdict::NotCertified => "NOT_CERTIFIED",
            Verdict::TheoremViolation => "THEOREM_VIOLATION",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::CertifiedStable => 0,
            Verdict::NotCertified => 2,
            Verdict::TheoremViolation => 3,
        }
    }
}

/// Finds a usable exponential bound strictly inside (ω₀-upper, 0).
fn pick_exponential_bound(
    fam: &EvolutionFamily,
    w_upper: f64,
    norm: MatrixNorm,
) -> Result<Option<ExponentialBound>> {
    let candidates: Vec<f64> = if w_upper.is_finite() {
        vec![w_upper * 0.5, w_upper * 0.25, w_upper * 0.75, w_upper * 0.1]
    } else {
        vec![-1.0, -2.0, -0.5, -4.0]
    };
    for omega in candidates {
        if let OmegaVerdict::Bounded(b) = fam.exponential_bound(omega, norm)? {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Datko sums Σ_{n=j}^{horizon}‖U(n, j)x‖^p over standard basis vectors,
/// with a geometric tail from the exponential bound when one is supplied.
/// Without bounds it acts as the divergence diagnostic.
pub fn datko_check(
    fam: &EvolutionFamily,
    p: f64,
    j_max: u64,
    horizon: usize,
    bound: Option<&ExponentialBound>,
    c_upper: Option<f64>,
) -> Result<Vec<DatkoRowReport>> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(CoreError::InvalidParameter(format!(
            "datko check requires 1 <= p < inf, got {p}"
        )));
    }
    let d = fam.dim();
    let mut rows = Vec::new();
    for j in 1..=j_max {
        for basis in 0..d {
            let mut x = CVector::basis(d, basis);
            let mut sum = 1.0_f64; // n = j term: ‖x‖^p = 1
            let mut diverged = false;
            for n in j as usize..(j as usize + horizon) {
                x = fam.spec().step(n).mul_vec(&x);
                let term = x.norm(p).expect("p >= 1");
                sum += term.powf(p);
                if sum.powf(1.0 / p) > DIVERGENCE_THRESHOLD {
                    diverged = true;
                    break;
                }
            }
            let (tail_bound, chain_bound) = match bound {
                Some(b) if b.omega < 0.0 => {
                    let e_wp = (b.omega * p).exp();
                    let tail = b.coeff.powf(p) * e_wp.powf(horizon as f64 + 1.0)
                        / (1.0 - e_wp);
                    let e_nup = (-b.omega * p).exp();
                    let chain = b.coeff.powf(p) * e_nup / (e_nup - 1.0);
                    (tail, chain)
                }
                _ => (f64::INFINITY, f64::INFINITY),
            };
            let c_upper_pow = c_upper.map(|c| c.powf(p)).unwrap_or(f64::INFINITY);
            let bounded = !diverged
                && sum + tail_bound.min(f64::MAX) <= chain_bound * (1.0 + 1e-9)
                && sum <= c_upper_pow * (1.0 + 1e-9);
            rows.push(DatkoRowReport {
                j,
                basis,
                p,
                partial_sum: sum,
                tail_bound,
                chain_bound,
                c_upper_pow,
                bounded,
                diverged,
            });
        }
    }
    Ok(rows)
}

/// Summed-power-norm checks for a single operator T with r(T) < 1: the
/// power norms dominate every ℓᵖ convolution norm, and ln(r)·u₁ ≤ -1.
pub fn power_sum_report(
    t: &CMatrix,
    p_list: &[f64],
    seed: u64,
) -> Result<Vec<PowerSumReport>> {
    let fam = EvolutionFamily::new(GeneratorSpec::autonomous(t.clone()));
    let r_ub = gelfand(t, MatrixNorm::Two, 40)?.r_upper();
    if !(r_ub < 1.0) {
        return Err(CoreError::NotStableCertified(format!(
            "r_ub(T) = {r_ub} is not below 1"
        )));
    }
    let r_lb = if t.dim() <= eigen::EIGEN_DIM_CAP {
        eigen::spectral_radius_from_eigen(t)?.min(r_ub)
    } else {
        0.0
    };
    let exact_case = t.dim() == 1 || t.is_diagonal();
    let mut out = Vec::new();
    for &p in p_list {
        let norm = SpaceSpec::Lp(p).matrix_norm();
        let u1 = u1_bracket(t, norm, 1e-9)?;
        let n = (crate::conv::DENSE_ORACLE_CAP / t.dim()).min(256);
        let conv_lower = conv_norm_lower(&fam, SpaceSpec::Lp(p), n, seed)?.value;
        let product = if r_lb == 0.0 {
            f64::NEG_INFINITY
        } else {
            r_lb.ln() * u1.upper
        };
        let (product_exact, exact_ok) = if exact_case {
            let r = r_lb;
            let u1_exact = 1.0 / (1.0 - r);
            let pe = if r == 0.0 {
                f64::NEG_INFINITY
            } else {
                r.ln() * u1_exact
            };
            (pe, pe <= -1.0 + 1e-12)
        } else {
            (f64::NAN, true)
        };
        let verdict =
            conv_lower <= u1.upper + 1e-9 && product <= -1.0 + 1e-9 && exact_ok;
        out.push(PowerSumReport {
            p,
            u1_lower: u1.lower,
            u1_upper: u1.upper,
            conv_lower,
            product,
            product_exact,
            exact_case,
            verdict,
        });
    }
    Ok(out)
}

/// A complete certification run.
#[derive(Debug)]
pub struct Certification {
    pub verdict: Verdict,
    pub report: CertificateReport,
    /// In-memory bracket with the witness, for callers that reuse it.
    pub c_bracket: Option<NormBracket>,
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Full pipeline: growth bound → exponential bounds → convolution bracket →
/// disk/resolvent/Datko checks → margins and verdict.
pub fn certify(config: &AnalysisConfig) -> Result<Certification> {
    let fam = EvolutionFamily::new(config.spec.clone());
    let space = config.space;
    let growth = fam.growth_bound_oracle()?;
    let mut notes = vec![format!(
        "omega0 via tail monodromy: pairs (m+kq, m) in the tail force the rate \
         (1/{q})·ln r(P) and the finite prefix only contributes a bounded factor; \
         cross-checked against windowed brute-force suprema in the test suite",
        q = fam.spec().period()
    )];
    if matches!(space, SpaceSpec::LInfty) {
        notes.push(
            "linf caveat: lower bounds use finitely supported witnesses; the gap to the \
             sup over all bounded sequences is unresolved in general"
                .into(),
        );
    }
    let mut report = CertificateReport {
        schema_version: REPORT_SCHEMA_VERSION,
        family_digest: config.family_digest.clone(),
        space: space.label(),
        seed: config.seed,
        tolerance: config.tolerance,
        power_iteration_tolerance: POWER_ITER_TOL,
        power_iteration_cap: POWER_ITER_CAP,
        timestamp_unix: Some(now_unix()),
        omega0: BracketReport {
            lower: growth.lower,
            upper: growth.upper,
            value: growth.value,
        },
        c_bracket: None,
        growth_product: None,
        disk: None,
        resolvent: None,
        datko: vec![],
        power_sums: None,
        verdict: String::new(),
        notes: vec![],
    };

    if !(growth.upper < 0.0) {
        // not uniformly exponentially stable (or not certifiably so):
        // report the divergence diagnostics and stop
        if growth.lower < 0.0 {
            notes.push(format!(
                "growth bracket [{:.6}, {:.6}] straddles 0: stability not certifiable",
                growth.lower, growth.upper
            ));
        } else {
            notes.push(
                "growth bound is nonnegative: the convolution operator is unbounded".into(),
            );
        }
        let p_diag = match space {
            SpaceSpec::Lp(p) => p,
            _ => 1.0,
        };
        report.datko = datko_check(&fam, p_diag, 4, 400, None, None)?;
        report.verdict = Verdict::NotCertified.label().into();
        report.notes = notes;
        return Ok(Certification {
            verdict: Verdict::NotCertified,
            report,
            c_bracket: None,
        });
    }
    if growth.value == f64::NEG_INFINITY {
        notes.push("nilpotent monodromy: growth bound is -inf, products follow the -inf·positive = -inf convention".into());
    }

    let bracket = conv_norm_bracket(&fam, space, &config.schedule, config.tolerance, config.seed)?;
    if !bracket.converged {
        notes.push(format!(
            "bracket width {:.3e} above tolerance after the schedule (still a valid enclosure)",
            bracket.upper - bracket.lower
        ));
    }
    report.c_bracket = Some(CBracketReport {
        lower: bracket.lower,
        upper: bracket.upper,
        upper_provenance: match bracket.upper_provenance {
            UpperProvenance::AnalyticGeometric => "analytic-geometric".into(),
            UpperProvenance::ScalarExact => "scalar-exact".into(),
            UpperProvenance::DenseOracle => "dense-oracle".into(),
        },
        witness_length: bracket.witness_length,
        converged: bracket.converged,
    });

    let mut violation = false;

    // growth-bound product ω₀·c ≤ -1 at the corners
    let scalar_exact =
        fam.spec().is_scalar() && bracket.upper_provenance == UpperProvenance::ScalarExact;
    let product_favorable = if growth.lower == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        growth.lower * bracket.upper
    };
    let product_indeterminate = if growth.upper == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        growth.upper * bracket.lower
    };
    let product_exact = if scalar_exact {
        if growth.value == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            growth.value * bracket.upper
        }
    } else {
        f64::NAN
    };
    if product_favorable > -1.0 + 1e-9 {
        violation = true;
        notes.push(format!(
            "growth-bound product above -1 at the favorable corner: {product_favorable:.12}"
        ));
    }
    if scalar_exact && product_exact > -1.0 + 1e-12 {
        violation = true;
        notes.push(format!(
            "growth-bound product above -1 in the scalar-exact check: {product_exact:.15}"
        ));
    }
    report.growth_product = Some(GrowthProductReport {
        product_favorable,
        margin_favorable: -1.0 - product_favorable,
        product_indeterminate,
        product_exact,
        scalar_exact,
    });

    // spectral disk via semigroup power norms
    let sem = fam.semigroup_spectral_radius(space.upper_matrix_norm());
    let disk = disk_bound_check(&sem, &bracket);
    if !disk.verdict {
        violation = true;
        notes.push(format!(
            "disk inequality violated beyond bracket slack: margin {:.3e}, slack {:.3e}",
            disk.margin, disk.tol_bracket
        ));
    }
    report.disk = Some(DiskReport {
        margin: disk.margin,
        tol_bracket: disk.tol_bracket,
        r_upper: disk.r_upper,
        disk_edge_lower: disk.disk_edge_lower,
        verdict: disk.verdict,
    });

    // resolvent estimates on and beyond the unit circle
    let grid = UnimodularGrid::new(RESOLVENT_GRID);
    let res = resolvent_circle_bound(
        &fam,
        space,
        &grid,
        RESOLVENT_TRUNCATION.min(crate::conv::DENSE_ORACLE_CAP / fam.dim()),
        config.seed,
        bracket.upper,
    )?;
    if !res.verdict {
        violation = true;
        notes.push(format!(
            "resolvent estimate exceeded c upper bound: max {:.12} vs {:.12}",
            res.max_on_circle, bracket.upper
        ));
    }
    report.resolvent = Some(ResolventReport {
        grid_points: RESOLVENT_GRID,
        max_on_circle: res.max_on_circle,
        radial: res.radial,
        c_upper: bracket.upper,
        verdict: res.verdict,
    });

    // Datko sums per exponent, against per-p convolution bounds
    let datko_ps: Vec<f64> = match space {
        SpaceSpec::Lp(p) => vec![p],
        _ => vec![1.0, 2.0],
    };
    let mut datko_rows = Vec::new();
    for &p in &datko_ps {
        let p_space = SpaceSpec::Lp(p);
        let c_up_p = conv_norm_upper(&fam, p_space)?.value;
        let bound = pick_exponential_bound(&fam, growth.upper, p_space.upper_matrix_norm())?;
        let rows = datko_check(&fam, p, 4, 400, bound.as_ref(), Some(c_up_p))?;
        for row in &rows {
            if row.diverged {
                violation = true;
                notes.push(format!(
                    "datko divergence for a certified-stable family at p = {p}, j = {}",
                    row.j
                ));
            } else if !row.bounded {
                violation = true;
                notes.push(format!(
                    "datko sum exceeded its bound at p = {p}, j = {}, basis {}",
                    row.j, row.basis
                ));
            }
        }
        datko_rows.extend(rows);
    }
    report.datko = datko_rows;

    // summed power norms for autonomous families
    if fam.spec().is_autonomous() {
        let t = fam.spec().tail_step(0).clone();
        let rows = power_sum_report(&t, &[1.0, 2.0, 4.0], config.seed)?;
        for row in &rows {
            if !row.verdict {
                violation = true;
                notes.push(format!(
                    "power-sum check failed at p = {}: conv lower {:.9} vs u1 upper {:.9}, product {:.9}",
                    row.p, row.conv_lower, row.u1_upper, row.product
                ));
            }
        }
        report.power_sums = Some(rows);
    }

    let verdict = if violation {
        Verdict::TheoremViolation
    } else {
        Verdict::CertifiedStable
    };
    report.verdict = verdict.label().into();
    report.notes = notes;
    Ok(Certification {
        verdict,
        report,
        c_bracket: Some(bracket),
    })
}

/// One γ row of the tightness sweep over scalar constant families on c₀.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub gamma: f64,
    pub omega0: f64,
    pub c_lower: f64,
    pub c_upper: f64,
    pub product_corner: f64,
    pub margin: f64,
}

pub fn gamma_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    let grid: Vec<f64> = match steps {
        0 => vec![],
        1 => vec![from],
        _ => (0..steps)
            .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
            .collect(),
    };
    for &g in &grid {
        if !(g > 0.0 && g < 1.0) {
            return Err(CoreError::InvalidParameter(format!(
                "sweep gamma {g} outside (0, 1)"
            )));
        }
    }
    Ok(grid)
}

/// Evaluates the sweep rows concurrently; the output order follows the grid.
pub fn sweep(gammas: &[f64], tol: f64, seed: u64) -> Result<Vec<SweepRow>> {
    gammas
        .par_iter()
        .map(|&gamma| {
            let spec = GeneratorSpec::scalar_periodic(&[], &[gamma])?;
            let fam = EvolutionFamily::new(spec);
            let growth = fam.growth_bound_oracle()?;
            let bracket = conv_norm_bracket(&fam, SpaceSpec::C0, &Schedule::Auto, tol, seed)?;
            let product_corner = growth.value * bracket.upper;
            Ok(SweepRow {
                gamma,
                omega0: growth.value,
                c_lower: bracket.lower,
                c_upper: bracket.upper,
                product_corner,
                margin: -1.0 - product_corner,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("gamma,omega0,c_lower,c_upper,product_corner,margin\n");
    for r in rows {
        out.push_str(&format!(
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
            r.gamma, r.omega0, r.c_lower, r.c_upper, r.product_corner, r.margin
        ));
    }
    out
}

/// Structured-vs-dense comparison used by the CLI oracle mode: applies both
/// paths to seeded inputs and returns the worst scaled mismatch, plus the
/// row/column-sum agreement for scalar families.
pub struct OracleComparison {
    pub apply_mismatch: f64,
    pub norm_mismatch: f64,
}

pub fn oracle_compare(fam: &EvolutionFamily, n: usize, seed: u64) -> Result<OracleComparison> {
    let m = crate::conv::dense_oracle_matrix(fam, n)?;
    let mut worst = 0.0_f64;
    for trial in 0..4u64 {
        let f = crate::space::random_unit(SpaceSpec::Lp(2.0), fam.dim(), n, seed + trial)?;
        let flat = crate::conv::flatten_tail(&f);
        let dense_out = m.mul_vec(&flat);
        let structured = crate::conv::flatten_tail(&crate::conv::apply_convolution(fam, &f)?);
        let scale = dense_out
            .entries()
            .iter()
            .chain(structured.entries())
            .map(|z| z.norm())
            .fold(1.0_f64, f64::max);
        let diff = dense_out
            .entries()
            .iter()
            .zip(structured.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0_f64, f64::max);
        worst = worst.max(diff / scale);
    }
    let norm_mismatch = if fam.dim() == 1 {
        let row = crate::linalg::op_norm_inf(&m);
        let col = crate::linalg::op_norm_one(&m);
        let lo_row = conv_norm_lower(fam, SpaceSpec::LInfty, n, seed)?.value;
        let lo_col = conv_norm_lower(fam, SpaceSpec::Lp(1.0), n, seed)?.value;
        (row - lo_row).abs().max((col - lo_col).abs())
    } else {
        0.0
    };
    Ok(OracleComparison {
        apply_mismatch: worst,
        norm_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ConfigFile, SpaceConfig, scalar_config};

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn certify_scalar(gamma: f64) -> Certification {
        let cfg = scalar_config(gamma, SpaceConfig::C0).resolve().unwrap();
        certify(&cfg).unwrap()
    }

    #[test]
    fn certify_half_reproduces_example_numbers() {
        let cert = certify_scalar(0.5);
        assert_eq!(cert.verdict, Verdict::CertifiedStable);
        let rep = &cert.report;
        approx(rep.omega0.value, 0.5_f64.ln(), 1e-12);
        let cb = rep.c_bracket.as_ref().unwrap();
        approx(cb.upper, 2.0, 1e-12);
        let t1 = rep.growth_product.as_ref().unwrap();
        assert!(t1.scalar_exact);
        approx(t1.product_exact, -1.3862943611, 1e-9);
        approx(t1.margin_favorable, 0.386294, 2e-6);
    }

    #[test]
    fn certify_near_one_shows_near_tightness() {
        let cert = certify_scalar(0.999);
        assert_eq!(cert.verdict, Verdict::CertifiedStable);
        let t1 = cert.report.growth_product.as_ref().unwrap();
        approx(t1.product_exact, -1.000500, 2e-6);
    }

    #[test]
    fn certify_zero_generator_nilpotent_convention() {
        let cfg = ConfigFile::from_json(
            r#"{"schema_version": 1, "dimension": 1,
                "tail": {"type": "constant", "matrix": [[0.0, 0.0]]}}"#,
        )
        .unwrap()
        .resolve()
        .unwrap();
        let cert = certify(&cfg).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedStable);
        assert_eq!(cert.report.omega0.value, f64::NEG_INFINITY);
        let t1 = cert.report.growth_product.as_ref().unwrap();
        assert_eq!(t1.product_favorable, f64::NEG_INFINITY);
        assert!(cert.report.notes.iter().any(|n| n.contains("nilpotent")));
    }

    #[test]
    fn certify_unstable_reports_divergence() {
        let cert = certify_scalar(2.0);
        assert_eq!(cert.verdict, Verdict::NotCertified);
        assert!(cert.report.datko.iter().any(|r| r.diverged));
        // doubling overruns 1e6 around n = 21
        let row = cert.report.datko.iter().find(|r| r.j == 1).unwrap();
        assert!(row.partial_sum > DIVERGENCE_THRESHOLD);
    }

    #[test]
    fn datko_scalar_half_tight_at_p1() {
        let fam = EvolutionFamily::new(GeneratorSpec::scalar_periodic(&[], &[0.5]).unwrap());
        let bound = match fam
            .exponential_bound(0.5_f64.ln(), MatrixNorm::One)
            .unwrap()
        {
            OmegaVerdict::Bounded(b) => b,
            other => panic!("{other:?}"),
        };
        let rows = datko_check(&fam, 1.0, 1, 200, Some(&bound), Some(2.0)).unwrap();
        let row = &rows[0];
        // Σ_{n≥1}0.5^{n-1} = 2 = c₁: equality case, the tail closes it
        approx(row.partial_sum + row.tail_bound, 2.0, 1e-9);
        assert!(row.bounded);
    }

    #[test]
    fn datko_scalar_half_p2() {
        let fam = EvolutionFamily::new(GeneratorSpec::scalar_periodic(&[], &[0.5]).unwrap());
        let rows = datko_check(&fam, 2.0, 1, 200, None, None).unwrap();
        // Σ 0.25^{n-1} = 4/3
        approx(rows[0].partial_sum, 4.0 / 3.0, 1e-12);
    }

    #[test]
    fn power_sum_diag_half() {
        let t = CMatrix::diag(&[crate::linalg::C64::new(0.5, 0.0)]);
        let rows = power_sum_report(&t, &[1.0, 2.0], 3).unwrap();
        for row in rows {
            assert!(row.verdict);
            assert!(row.exact_case);
            approx(row.product_exact, 0.5_f64.ln() * 2.0, 1e-12);
            assert!(row.conv_lower <= row.u1_upper + 1e-9);
        }
    }

    #[test]
    fn power_sum_zero_matrix() {
        let t = CMatrix::zeros(2);
        let rows = power_sum_report(&t, &[2.0], 3).unwrap();
        assert_eq!(rows[0].product, f64::NEG_INFINITY);
        assert!(rows[0].verdict);
        approx(rows[0].u1_lower, 1.0, 1e-12);
    }

    #[test]
    fn power_sum_rejects_unstable() {
        let t = CMatrix::diag(&[crate::linalg::C64::new(1.2, 0.0)]);
        assert!(power_sum_report(&t, &[2.0], 3).is_err());
    }

    #[test]
    fn sweep_matches_closed_form() {
        let rows = sweep(&[0.5, 0.9, 0.99, 0.999], 1e-6, 42).unwrap();
        let want = [-1.386294, -1.053605, -1.005034, -1.000500];
        for (row, w) in rows.iter().zip(&want) {
            approx(row.product_corner, *w, 2e-6);
        }
        // strictly increasing toward -1
        for pair in rows.windows(2) {
            assert!(pair[1].product_corner > pair[0].product_corner);
        }
    }

    #[test]
    fn sweep_single_point_matches_certify() {
        let rows = sweep(&[0.5], 1e-6, 42).unwrap();
        assert_eq!(rows.len(), 1);
        let cert = certify_scalar(0.5);
        let cb = cert.report.c_bracket.as_ref().unwrap();
        approx(rows[0].c_upper, cb.upper, 0.0);
        approx(rows[0].omega0, cert.report.omega0.value, 0.0);
    }

    #[test]
    fn sweep_empty_grid() {
        let rows = sweep(&[], 1e-6, 42).unwrap();
        assert!(rows.is_empty());
        let csv = sweep_csv(&rows);
        assert_eq!(csv.lines().count(), 1); // header only
    }

    #[test]
    fn gamma_grid_rejects_out_of_range() {
        assert!(gamma_grid(0.5, 1.0, 3).is_err());
        assert!(gamma_grid(0.0, 0.9, 3).is_err());
        assert_eq!(gamma_grid(0.5, 0.999, 2).unwrap(), vec![0.5, 0.999]);
    }

    #[test]
    fn oracle_compare_scalar_exact() {
        let fam = EvolutionFamily::new(GeneratorSpec::scalar_periodic(&[], &[0.5]).unwrap());
        let cmp = oracle_compare(&fam, 32, 42).unwrap();
        assert!(cmp.apply_mismatch <= 1e-10, "{}", cmp.apply_mismatch);
        assert!(cmp.norm_mismatch <= 1e-12, "{}", cmp.norm_mismatch);
    }

    #[test]
    fn certificate_report_roundtrips() {
        let cert = certify_scalar(0.5);
        let text = cert.report.to_json();
        let back = CertificateReport::from_json(&text).unwrap();
        let text2 = back.to_json();
        for (a, b) in text.lines().zip(text2.lines()) {
            assert_eq!(a, b, "first differing line");
        }
        assert_eq!(back.digest(), cert.report.digest());
    }
}
