//! Acceptance suite: each test runs one criterion end to end at its stated
//! tolerance and prints one pass/fail line. The corpus certificates are
//! produced once and shared across criteria.

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use stabcert_core::certify::{Certification, Verdict, certify, oracle_compare, sweep};
use stabcert_core::config::{SpaceConfig, config_from_spec, scalar_config};
use stabcert_core::conv::{conv_norm_lower, conv_norm_upper, dense_oracle_matrix, u1_bracket};
use stabcert_core::corpus::{CorpusFamily, stable_corpus, unstable_corpus};
use stabcert_core::eigen::spectral_radius_from_eigen;
use stabcert_core::family::EvolutionFamily;
use stabcert_core::linalg::{C64, MatrixNorm, op_norm_inf, op_norm_one};
use stabcert_core::resolvent::{
    elementary_inequality_check, rotation_identity_check, unit_interval_grid,
};
use stabcert_core::space::{SpaceSpec, random_unit};

struct CorpusRun {
    certs: Vec<(String, Certification)>,
    elapsed: Duration,
}

static CORPUS_RUN: OnceLock<CorpusRun> = OnceLock::new();

fn corpus_run() -> &'static CorpusRun {
    CORPUS_RUN.get_or_init(|| {
        let families = stable_corpus();
        let start = Instant::now();
        let certs = families
            .iter()
            .map(|fam| {
                let cfg = config_from_spec(fam.family.spec(), fam.space.into())
                    .resolve()
                    .expect("corpus config resolves");
                (fam.name.clone(), certify(&cfg).expect("certify runs"))
            })
            .collect();
        CorpusRun {
            certs,
            elapsed: start.elapsed(),
        }
    })
}

fn pass(criterion: usize, name: &str) {
    println!("ACCEPTANCE {criterion} ({name}): PASS");
}

#[test]
fn criterion_01_scalar_family_reproduction() {
    let start = Instant::now();
    let gammas = [0.5, 0.9, 0.99, 0.999];
    let expected = [-1.386294, -1.053605, -1.005034, -1.000500];
    let mut products = Vec::new();
    for (&gamma, &want) in gammas.iter().zip(&expected) {
        let cfg = scalar_config(gamma, SpaceConfig::C0).resolve().unwrap();
        let cert = certify(&cfg).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedStable, "gamma {gamma}");
        let cb = cert.report.c_bracket.as_ref().unwrap();
        let width = cb.upper - cb.lower;
        assert!(width <= 1e-6, "gamma {gamma}: bracket width {width}");
        let c_exact = 1.0 / (1.0 - gamma);
        assert!(
            (cb.upper - c_exact).abs() <= 1e-6 * c_exact.max(1.0),
            "gamma {gamma}: c {} vs {c_exact}",
            cb.upper
        );
        let product = cert.report.growth_product.as_ref().unwrap().product_exact;
        assert!(
            (product - want).abs() <= 1e-6,
            "gamma {gamma}: product {product} vs {want}"
        );
        products.push(product);
    }
    for pair in products.windows(2) {
        assert!(
            pair[1] > pair[0] && pair[1] < -1.0,
            "products must increase toward -1: {pair:?}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    pass(1, "scalar gamma-family values reproduced exactly, runtime < 5 s");
}

#[test]
fn criterion_02_growth_product_non_violation() {
    let run = corpus_run();
    assert!(run.certs.len() >= 50, "corpus has {} families", run.certs.len());
    for (name, cert) in &run.certs {
        assert_eq!(
            cert.verdict,
            Verdict::CertifiedStable,
            "{name}: verdict {:?} with notes {:?}",
            cert.verdict,
            cert.report.notes
        );
        let t1 = cert.report.growth_product.as_ref().unwrap();
        assert!(
            t1.product_favorable <= -1.0 + 1e-9,
            "{name}: favorable corner {}",
            t1.product_favorable
        );
        if t1.scalar_exact {
            assert!(
                t1.product_exact <= -1.0 + 1e-12,
                "{name}: exact product {}",
                t1.product_exact
            );
        }
    }
    assert!(
        run.elapsed < Duration::from_secs(60),
        "corpus certification took {:?}",
        run.elapsed
    );
    pass(2, "growth-bound product stays below -1 on 50+ families, runtime < 60 s");
}

#[test]
fn criterion_03_disk_tightness() {
    // equality case: scalar constant families, exact r and exact c
    for gamma in [0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99, 0.999] {
        let fam = EvolutionFamily::new(
            stabcert_core::family::GeneratorSpec::scalar_periodic(&[], &[gamma]).unwrap(),
        );
        let growth = fam.growth_bound_oracle().unwrap();
        let r = growth.r_step_upper;
        let c = conv_norm_upper(&fam, SpaceSpec::C0).unwrap().value;
        assert!(
            (r - (1.0 - 1.0 / c)).abs() <= 1e-12,
            "gamma {gamma}: r {r} vs 1 - 1/c {}",
            1.0 - 1.0 / c
        );
    }
    // bracketed inequality with nonnegative margin up to slack, full corpus
    for (name, cert) in &corpus_run().certs {
        let t2 = cert.report.disk.as_ref().unwrap();
        assert!(
            t2.verdict && t2.margin >= -t2.tol_bracket - 1e-9,
            "{name}: margin {} slack {}",
            t2.margin,
            t2.tol_bracket
        );
    }
    pass(3, "disk equality on scalar constants, disk inequality corpus-wide");
}

#[test]
fn criterion_04_rotation_identity() {
    let mut worst = 0.0_f64;
    for fam in stable_corpus() {
        let f = random_unit(SpaceSpec::Lp(2.0), fam.family.dim(), 64, 4242).unwrap();
        for m in 0..64usize {
            let t = std::f64::consts::TAU * m as f64 / 64.0;
            let z = C64::new(t.cos(), t.sin());
            let dev = rotation_identity_check(&fam.family, z, &f).unwrap();
            worst = worst.max(dev);
            assert!(
                dev <= 1e-10,
                "{}: deviation {dev} at grid point {m}",
                fam.name
            );
        }
    }
    pass(4, &format!("rotation identity, worst deviation {worst:.3e} <= 1e-10"));
}

#[test]
fn criterion_05_resolvent_bound() {
    for (name, cert) in &corpus_run().certs {
        let res = cert.report.resolvent.as_ref().unwrap();
        let c_up = res.c_upper;
        assert!(
            res.max_on_circle <= c_up + 1e-9,
            "{name}: circle max {} vs c {}",
            res.max_on_circle,
            c_up
        );
        for &(radius, est) in &res.radial {
            assert!(
                est <= c_up + 1e-9,
                "{name}: estimate {est} at |z| = {radius} vs c {c_up}"
            );
        }
        assert!(res.verdict, "{name}");
    }
    pass(5, "resolvent estimates at |z| in {1, 1.25, 2, 10} below c upper");
}

#[test]
fn criterion_06_growth_semigroup_bracket() {
    for fam in stable_corpus() {
        let growth = fam.family.growth_bound_oracle().unwrap();
        let sem = fam.family.semigroup_spectral_radius(MatrixNorm::Inf);
        if sem.upper == 0.0 {
            assert_eq!(
                growth.value,
                f64::NEG_INFINITY,
                "{}: zero semigroup radius needs -inf growth",
                fam.name
            );
            continue;
        }
        let ln_lo = sem.lower.ln();
        let ln_up = sem.upper.ln();
        let slack = (ln_up - ln_lo).abs() + 1e-6;
        assert!(
            ln_lo - slack <= growth.value && growth.value <= ln_up + slack,
            "{}: omega0 {} outside [{ln_lo}, {ln_up}] + {slack}",
            fam.name,
            growth.value
        );
        if fam.scalar && fam.family.spec().period() == 1 && fam.family.spec().prefix_len() == 0 {
            assert!(
                (ln_up - growth.value).abs() <= 1e-12,
                "{}: scalar bracket should collapse: {} vs {}",
                fam.name,
                ln_up,
                growth.value
            );
        }
    }
    pass(6, "semigroup radius bracket encloses the growth bound");
}

#[test]
fn criterion_07_datko_equivalences() {
    // (a) stable corpus: every Datko row bounded with its tail
    for (name, cert) in &corpus_run().certs {
        for row in &cert.report.datko {
            assert!(
                row.bounded && !row.diverged,
                "{name}: datko row j={} basis={} p={} unbounded (sum {:.6e})",
                row.j,
                row.basis,
                row.p,
                row.partial_sum
            );
        }
    }
    // (b) unstable corpus: divergence and NOT_CERTIFIED
    for fam in unstable_corpus() {
        let cfg = config_from_spec(fam.family.spec(), fam.space.into())
            .resolve()
            .unwrap();
        let cert = certify(&cfg).unwrap();
        assert_eq!(cert.verdict, Verdict::NotCertified, "{}", fam.name);
        assert!(
            cert.report.datko.iter().any(|r| r.diverged),
            "{}: expected a divergence report",
            fam.name
        );
    }
    // (c) analytic upper dominates truncated lower for every (family, p)
    for fam in stable_corpus() {
        for p in [1.0, 2.0, 4.0] {
            let space = SpaceSpec::Lp(p);
            let upper = conv_norm_upper(&fam.family, space).unwrap().value;
            let lower = conv_norm_lower(&fam.family, space, 64, 7).unwrap().value;
            assert!(
                lower <= upper + 1e-9,
                "{}: p={p}: truncated lower {lower} above analytic upper {upper}",
                fam.name
            );
        }
    }
    pass(7, "Datko sums bounded, divergence flagged, analytic uppers dominate");
}

#[test]
fn criterion_08_power_sums() {
    for fam in stable_corpus() {
        let Some(t) = &fam.autonomous_step else {
            continue;
        };
        let r_lb = spectral_radius_from_eigen(t).unwrap();
        for p in [1.0, 2.0, 4.0] {
            let norm = SpaceSpec::Lp(p).matrix_norm();
            let u1 = u1_bracket(t, norm, 1e-9).unwrap();
            for n in [16usize, 32, 64] {
                let lower = conv_norm_lower(&fam.family, SpaceSpec::Lp(p), n, 5)
                    .unwrap()
                    .value;
                assert!(
                    lower <= u1.upper + 1e-9,
                    "{}: p={p} N={n}: {lower} vs u1 {}",
                    fam.name,
                    u1.upper
                );
            }
            let product = if r_lb == 0.0 {
                f64::NEG_INFINITY
            } else {
                r_lb.ln() * u1.upper
            };
            assert!(
                product <= -1.0 + 1e-9,
                "{}: p={p}: ln(r)·u1 = {product}",
                fam.name
            );
        }
        if fam.scalar {
            let r = t.entry(0, 0).norm();
            if r > 0.0 {
                let exact = r.ln() / (1.0 - r);
                assert!(
                    exact <= -1.0 + 1e-12,
                    "{}: exact product {exact}",
                    fam.name
                );
            }
        }
    }
    pass(8, "u1 dominates lp lower bounds and ln(r)·u1 <= -1");
}

#[test]
fn criterion_09_oracle_equivalence() {
    // in-process: every corpus family within the cap
    for fam in stable_corpus() {
        let n = 256 / fam.family.dim();
        let cmp = oracle_compare(&fam.family, n, 99).unwrap();
        assert!(
            cmp.apply_mismatch <= 1e-10,
            "{}: apply mismatch {}",
            fam.name,
            cmp.apply_mismatch
        );
        if fam.scalar {
            // induced dense norms against the scalar-exact truncated sums
            let m = dense_oracle_matrix(&fam.family, n).unwrap();
            let row = op_norm_inf(&m);
            let col = op_norm_one(&m);
            let lo_row = conv_norm_lower(&fam.family, SpaceSpec::LInfty, n, 1)
                .unwrap()
                .value;
            let lo_col = conv_norm_lower(&fam.family, SpaceSpec::Lp(1.0), n, 1)
                .unwrap()
                .value;
            assert!(
                (row - lo_row).abs() <= 1e-12 * row.max(1.0),
                "{}: row sums {row} vs {lo_row}",
                fam.name
            );
            assert!(
                (col - lo_col).abs() <= 1e-12 * col.max(1.0),
                "{}: col sums {col} vs {lo_col}",
                fam.name
            );
        }
    }
    // CLI oracle mode on a slice of the corpus
    let dir = tempfile::tempdir().unwrap();
    for fam in stable_corpus().iter().step_by(11) {
        let cfg = config_from_spec(fam.family.spec(), fam.space.into());
        let path = dir.path().join(format!("{}.json", fam.name));
        std::fs::write(&path, cfg.to_json()).unwrap();
        let n = (256 / fam.family.dim()).min(64);
        let out = Command::new(env!("CARGO_BIN_EXE_stabcert"))
            .args(["oracle"])
            .arg(&path)
            .args(["--n", &n.to_string()])
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}: oracle mode exited {:?}: {}",
            fam.name,
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
    }
    pass(9, "dense oracle agrees with structured apply; exact norms match");
}

#[test]
fn criterion_10_elementary_inequality() {
    let grid = unit_interval_grid(10_000, 1e-8);
    let min_margin = elementary_inequality_check(&grid).unwrap();
    assert!(min_margin >= -1e-12, "min margin {min_margin}");
    pass(
        10,
        &format!("elementary inequality, min margin {min_margin:.6} >= -1e-12"),
    );
}

#[test]
fn criterion_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("family.json");
    let cfg = config_from_spec(
        EvolutionFamily::new(
            stabcert_core::family::GeneratorSpec::scalar_periodic(&[3.0], &[2.0, 0.125]).unwrap(),
        )
        .spec(),
        SpaceConfig::C0,
    );
    std::fs::write(&cfg_path, cfg.to_json()).unwrap();
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for out in [&out_a, &out_b] {
        let status = Command::new(env!("CARGO_BIN_EXE_stabcert"))
            .args(["certify"])
            .arg(&cfg_path)
            .args(["--seed", "42", "--out"])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let rep_a =
        stabcert_core::report::CertificateReport::from_json(&std::fs::read_to_string(&out_a).unwrap())
            .unwrap();
    let rep_b =
        stabcert_core::report::CertificateReport::from_json(&std::fs::read_to_string(&out_b).unwrap())
            .unwrap();
    assert_eq!(rep_a.digest(), rep_b.digest());
    // byte-identical after dropping the timestamp line
    let strip = |text: &str| -> String {
        text.lines()
            .filter(|l| !l.contains("timestamp_unix"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(
        strip(&std::fs::read_to_string(&out_a).unwrap()),
        strip(&std::fs::read_to_string(&out_b).unwrap())
    );
    // and the sweep path is deterministic as well
    let rows_a = sweep(&[0.5, 0.9], 1e-6, 7).unwrap();
    let rows_b = sweep(&[0.5, 0.9], 1e-6, 7).unwrap();
    for (a, b) in rows_a.iter().zip(&rows_b) {
        assert_eq!(a.c_lower.to_bits(), b.c_lower.to_bits());
        assert_eq!(a.product_corner.to_bits(), b.product_corner.to_bits());
    }
    pass(11, "identical config + seed gives identical reports");
}

/// Keeps the corpus helper type in the public API surface exercised.
#[test]
fn corpus_shape() {
    let fams: Vec<CorpusFamily> = stable_corpus();
    assert!(fams.iter().any(|f| f.scalar));
    assert!(fams.iter().any(|f| f.autonomous_step.is_some()));
}
