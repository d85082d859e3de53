//! A fixed gallery of test families: scalar constants, scalar periodic
//! tails, Jordan blocks, seeded random stable 3x3 systems, nilpotent
//! shifts, and a small unstable set. Property suites and the acceptance
//! harness both run over this corpus.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::family::{EvolutionFamily, GeneratorSpec, Tail};
use crate::linalg::{C64, CMatrix, gelfand, MatrixNorm};
use crate::space::SpaceSpec;

/// A named family with the space it is analyzed in by default.
pub struct CorpusFamily {
    pub name: String,
    pub family: EvolutionFamily,
    pub space: SpaceSpec,
    /// d = 1, so row/column closed forms are exact.
    pub scalar: bool,
    /// U(n, m) = T^{n-m}; carries the single step for summed-power checks.
    pub autonomous_step: Option<CMatrix>,
}

fn jordan(gamma: f64) -> CMatrix {
    CMatrix::from_real_rows(&[vec![gamma, 1.0], vec![0.0, gamma]]).unwrap()
}

/// Random complex 3x3 rescaled so its spectral radius is close to `target`.
pub fn random_stable_3x3(seed: u64, target: f64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<C64> = (0..9)
        .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let a = CMatrix::new(3, data).unwrap();
    let g = gelfand(&a, MatrixNorm::Two, 40).expect("gelfand on random 3x3");
    let r = g.r_estimate().max(1e-9);
    a.scale(C64::new(target / r, 0.0))
}

/// The stable corpus: ≥ 50 families spanning the structural cases.
pub fn stable_corpus() -> Vec<CorpusFamily> {
    let mut out = Vec::new();
    let spaces = [
        SpaceSpec::C0,
        SpaceSpec::Lp(2.0),
        SpaceSpec::Lp(1.0),
        SpaceSpec::LInfty,
    ];

    for (i, &gamma) in [0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99, 0.999]
        .iter()
        .enumerate()
    {
        let spec = GeneratorSpec::scalar_periodic(&[], &[gamma]).unwrap();
        let step = CMatrix::scalar(C64::new(gamma, 0.0));
        out.push(CorpusFamily {
            name: format!("scalar-const-{gamma}"),
            family: EvolutionFamily::new(spec),
            space: if i % 2 == 0 { SpaceSpec::C0 } else { SpaceSpec::Lp(1.0) },
            scalar: true,
            autonomous_step: Some(step),
        });
    }

    let periodic_tails: [&[f64]; 6] = [
        &[2.0, 0.125],
        &[0.5, 0.5],
        &[3.0, 0.1, 0.2],
        &[1.5, 0.4],
        &[0.9, 1.05],
        &[4.0, 0.05, 1.2, 0.3],
    ];
    for (i, tail) in periodic_tails.iter().enumerate() {
        let spec = GeneratorSpec::scalar_periodic(&[], tail).unwrap();
        out.push(CorpusFamily {
            name: format!("scalar-periodic-{i}"),
            family: EvolutionFamily::new(spec),
            space: spaces[i % spaces.len()],
            scalar: true,
            autonomous_step: None,
        });
    }

    let prefixed: [(&[f64], &[f64]); 4] = [
        (&[5.0], &[0.5]),
        (&[0.1, 2.0], &[0.8]),
        (&[3.0], &[2.0, 0.125]),
        (&[0.0], &[0.6]),
    ];
    for (i, (prefix, tail)) in prefixed.iter().enumerate() {
        let spec = GeneratorSpec::scalar_periodic(prefix, tail).unwrap();
        out.push(CorpusFamily {
            name: format!("scalar-prefixed-{i}"),
            family: EvolutionFamily::new(spec),
            space: spaces[i % spaces.len()],
            scalar: true,
            autonomous_step: None,
        });
    }

    for &gamma in &[0.3, 0.5, 0.7, 0.9] {
        let t = jordan(gamma);
        let spec = GeneratorSpec::autonomous(t.clone());
        out.push(CorpusFamily {
            name: format!("jordan-{gamma}"),
            family: EvolutionFamily::new(spec),
            space: SpaceSpec::Lp(2.0),
            scalar: false,
            autonomous_step: Some(t),
        });
    }

    // nilpotent: a 2x2 shift, a 3x3 shift, and a periodic tail whose
    // monodromy is nilpotent without either factor being so
    let shift2 = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    let shift3 = CMatrix::from_real_rows(&[
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, 0.0],
    ])
    .unwrap();
    out.push(CorpusFamily {
        name: "nilpotent-2x2".into(),
        family: EvolutionFamily::new(GeneratorSpec::autonomous(shift2.clone())),
        space: SpaceSpec::C0,
        scalar: false,
        autonomous_step: Some(shift2.clone()),
    });
    out.push(CorpusFamily {
        name: "nilpotent-3x3".into(),
        family: EvolutionFamily::new(GeneratorSpec::autonomous(shift3.clone())),
        space: SpaceSpec::Lp(2.0),
        scalar: false,
        autonomous_step: Some(shift3),
    });
    let proj_a = CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
    let proj_b = CMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
    out.push(CorpusFamily {
        name: "nilpotent-periodic".into(),
        family: EvolutionFamily::new(
            GeneratorSpec::new(2, vec![], Tail::Periodic(vec![proj_a, proj_b])).unwrap(),
        ),
        space: SpaceSpec::Lp(1.0),
        scalar: false,
        autonomous_step: None,
    });

    for i in 0..25u64 {
        let target = 0.2 + 0.028 * i as f64; // spread over [0.2, 0.87]
        let t = random_stable_3x3(1000 + i, target);
        let spec = GeneratorSpec::autonomous(t.clone());
        out.push(CorpusFamily {
            name: format!("random-3x3-{i}"),
            family: EvolutionFamily::new(spec),
            space: spaces[(i as usize) % spaces.len()],
            scalar: false,
            autonomous_step: Some(t),
        });
    }

    // a couple of matrix-valued periodic/prefixed families
    let rot_scale = CMatrix::from_real_rows(&[vec![0.0, -0.7], vec![0.7, 0.0]]).unwrap();
    let diag_mix = CMatrix::from_real_rows(&[vec![0.9, 0.1], vec![0.0, 0.4]]).unwrap();
    out.push(CorpusFamily {
        name: "matrix-periodic".into(),
        family: EvolutionFamily::new(
            GeneratorSpec::new(2, vec![], Tail::Periodic(vec![rot_scale.clone(), diag_mix.clone()]))
                .unwrap(),
        ),
        space: SpaceSpec::Lp(2.0),
        scalar: false,
        autonomous_step: None,
    });
    out.push(CorpusFamily {
        name: "matrix-prefixed".into(),
        family: EvolutionFamily::new(
            GeneratorSpec::new(2, vec![jordan(0.5), rot_scale], Tail::Constant(diag_mix))
                .unwrap(),
        ),
        space: SpaceSpec::LInfty,
        scalar: false,
        autonomous_step: None,
    });

    out
}

/// Families that are not uniformly exponentially stable.
pub fn unstable_corpus() -> Vec<CorpusFamily> {
    let mut out = Vec::new();
    out.push(CorpusFamily {
        name: "scalar-const-2".into(),
        family: EvolutionFamily::new(GeneratorSpec::scalar_periodic(&[], &[2.0]).unwrap()),
        space: SpaceSpec::C0,
        scalar: true,
        autonomous_step: Some(CMatrix::scalar(C64::new(2.0, 0.0))),
    });
    out.push(CorpusFamily {
        name: "scalar-periodic-expanding".into(),
        family: EvolutionFamily::new(
            GeneratorSpec::scalar_periodic(&[], &[2.0, 0.6]).unwrap(),
        ),
        space: SpaceSpec::Lp(2.0),
        scalar: true,
        autonomous_step: None,
    });
    let t = random_stable_3x3(77, 1.5);
    out.push(CorpusFamily {
        name: "random-3x3-r1.5".into(),
        family: EvolutionFamily::new(GeneratorSpec::autonomous(t.clone())),
        space: SpaceSpec::Lp(2.0),
        scalar: false,
        autonomous_step: Some(t),
    });
    out
}
