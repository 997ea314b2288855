//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use fockphase::algebra::{
    phase_operators, reorder, rotation_conjugation_check, su11_generators, verify_bch_with, BchCheck, Ordering,
};
use fockphase::cli::random_params;
use fockphase::lattice::{
    compare_to_oracle, compare_to_oracle_with, impulse_profile, propagate, LatticeKind, LatticeSpec,
};
use fockphase::specfun::{bessel_i, bessel_j};
use fockphase::states::{
    bg_state, bg_state_ordered, deformed_annihilation, deformed_annihilation_su11, eigen_residual, london_state,
    london_state_ordered, phase_state, phase_state_perelomov,
};
use fockphase::FockVector;
use num_complex::Complex64;

type Criterion = fn() -> fockphase::Result<Outcome>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn within(value: f64, tol: f64) -> bool {
    value.is_finite() && value <= tol
}

fn uniform_impulse() -> fockphase::Result<Outcome> {
    let start = Instant::now();
    let spec = LatticeSpec::new(LatticeKind::Uniform, 64);
    let r = propagate(&spec, &FockVector::basis(64, 0)?, 5.0, 200, 20)?;
    let err = compare_to_oracle_with(&r, &spec, 1)?;
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome {
        passed: within(err, 1e-8) && secs <= 5.0,
        detail: format!("max_abs_error={err:.3e} (tol 1e-8), runtime={secs:.2}s (limit 5s)"),
    })
}

fn su11_impulse() -> fockphase::Result<Outcome> {
    let start = Instant::now();
    let spec = LatticeSpec::new(LatticeKind::Su11, 400);
    let r = propagate(&spec, &FockVector::basis(400, 0)?, 2.0, 200, 40)?;
    let err = compare_to_oracle(&r, &spec)?;
    let secs = start.elapsed().as_secs_f64();
    let all = compare_to_oracle_with(&r, &spec, 1)?;
    Ok(Outcome {
        passed: within(err, 1e-8) && within(r.edge_leakage, 1e-12) && secs <= 30.0,
        detail: format!(
            "max_abs_error={err:.3e} over guides < 300 (tol 1e-8; all guides {all:.3e}), \
             edge_leakage={:.3e} (tol 1e-12), runtime={secs:.2}s (limit 30s)",
            r.edge_leakage
        ),
    })
}

fn bch_identity() -> fockphase::Result<Outcome> {
    let mut sets = random_params(25, 0.3, 7, Ordering::AntinormalFirst).expect("valid draw");
    sets.extend(random_params(25, 0.3, 8, Ordering::NormalFirst).expect("valid draw"));
    let check = BchCheck::new(64);
    let mut residual: f64 = 0.0;
    let mut peak_relative: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    for p in &sets {
        let rep = verify_bch_with(p, &check)?;
        residual = residual.max(rep.residual);
        peak_relative = peak_relative.max(rep.peak_relative);
        let back = reorder(&rep.converted)?;
        round_trip = round_trip
            .max((back.plus - p.plus).norm())
            .max((back.zero - p.zero).norm())
            .max((back.minus - p.minus).norm());
    }
    Ok(Outcome {
        passed: sets.len() == 50 && within(residual, 1e-9) && within(round_trip, 1e-13),
        detail: format!(
            "{} sets, componentwise_residual={residual:.3e} (tol 1e-9), round_trip={round_trip:.3e} (tol 1e-13), \
             peak_relative={peak_relative:.3e} (info)",
            sets.len()
        ),
    })
}

fn phase_equivalence() -> fockphase::Result<Outcome> {
    let mut forms: f64 = 0.0;
    let mut eigen: f64 = 0.0;
    let v = phase_operators(32)?.v;
    for phi in [0.0, 0.7, 2.0, PI - 0.1] {
        let a = phase_state(phi, 32)?;
        forms = forms.max(a.max_deviation(&phase_state_perelomov(phi, 32, 96)?, 32)?);
        eigen = eigen.max(eigen_residual(&v, &a, Complex64::from_polar(1.0, phi), 1)?);
    }
    Ok(Outcome {
        passed: within(forms, 1e-8) && within(eigen, 1e-12),
        detail: format!("entrywise={forms:.3e} (tol 1e-8), shift_eigen_residual={eigen:.3e} (tol 1e-12)"),
    })
}

fn eigenvalue_relations() -> fockphase::Result<Outcome> {
    let kminus = su11_generators(64)?.kminus;
    let mut bg: f64 = 0.0;
    let mut london: f64 = 0.0;
    for alpha in [0.5, 1.3, 2.0] {
        let a = Complex64::new(alpha, 0.0);
        bg = bg.max(eigen_residual(&kminus, &bg_state(a, 64)?, a, 1)?);
        let c = deformed_annihilation(alpha, 64)?;
        london = london.max(eigen_residual(&c, &london_state(alpha, 64)?, a, 1)?);
    }
    Ok(Outcome {
        passed: within(bg, 1e-8) && within(london, 1e-8),
        detail: format!("K-_on_bg={bg:.3e}, C_on_london={london:.3e} (tol 1e-8)"),
    })
}

fn state_forms() -> fockphase::Result<Outcome> {
    let mut bg: f64 = 0.0;
    for r in [0.1, 1.0, 2.0, 3.0] {
        for t in [0.0, 1.0, 2.5, -2.0] {
            let a = Complex64::from_polar(r, t);
            bg = bg.max(bg_state(a, 32)?.max_deviation(&bg_state_ordered(a, 32, 96)?, 32)?);
        }
    }
    let mut london: f64 = 0.0;
    let mut deformed: f64 = 0.0;
    for alpha in [0.1, 0.5, 1.0, 1.3, 2.0, 2.5, 3.0] {
        london = london.max(london_state(alpha, 32)?.max_deviation(&london_state_ordered(alpha, 32, 96)?, 32)?);
        let c = deformed_annihilation(alpha, 64)?;
        deformed = deformed.max(c.max_deviation(&deformed_annihilation_su11(alpha, 64)?, 64)?);
    }
    Ok(Outcome {
        passed: within(bg, 1e-9) && within(london, 1e-9) && within(deformed, 1e-12),
        detail: format!(
            "bg_forms={bg:.3e}, london_forms={london:.3e} (tol 1e-9), deformed_forms={deformed:.3e} (tol 1e-12)"
        ),
    })
}

fn rotation_identity() -> fockphase::Result<Outcome> {
    let mut worst: f64 = 0.0;
    for dim in [64, 256] {
        for alpha in [1.0, 3.0] {
            worst = worst.max(rotation_conjugation_check(alpha, dim)?);
        }
    }
    Ok(Outcome { passed: within(worst, 1e-9), detail: format!("residual={worst:.3e} (tol 1e-9)") })
}

fn normalizations() -> fockphase::Result<Outcome> {
    let uni = LatticeSpec::new(LatticeKind::Uniform, 64);
    let su = LatticeSpec::new(LatticeKind::Su11, 400);
    let mut analytic: f64 = 0.0;
    for i in 1..=100 {
        let z = 5.0 * i as f64 / 100.0;
        let count = (4.0 * z).ceil() as usize + 40;
        let s: f64 = impulse_profile(&uni, 0, z, count)?.iter().map(|c| c.norm_sqr()).sum();
        analytic = analytic.max((s - 1.0).abs());
        let t2 = z.tanh().powi(2);
        let count = ((1e-17f64).ln() / t2.ln()).ceil() as usize + 1;
        let s: f64 = impulse_profile(&su, 0, z, count)?.iter().map(|c| c.norm_sqr()).sum();
        analytic = analytic.max((s - 1.0).abs());
    }
    let mut drift: f64 = 0.0;
    let runs = [
        (uni, FockVector::basis(64, 0)?, 5.0, 200, 20),
        (su, FockVector::basis(400, 0)?, 2.0, 200, 40),
        (LatticeSpec::new(LatticeKind::Uniform, 80), FockVector::basis(80, 20)?, 5.0, 100, 20),
        (LatticeSpec::new(LatticeKind::Su11, 200), FockVector::basis(200, 3)?, 0.5, 50, 100),
    ];
    for (spec, input, zmax, samples, steps) in runs {
        drift = drift.max(propagate(&spec, &input, zmax, samples, steps)?.norm_drift);
    }
    Ok(Outcome {
        passed: within(analytic, 1e-10) && within(drift, 1e-10),
        detail: format!("closed_form_norm={analytic:.3e}, propagation_norm_drift={drift:.3e} (tol 1e-10)"),
    })
}

fn special_functions() -> fockphase::Result<Outcome> {
    let rel = |a: f64, b: f64| if a == b { 0.0 } else { (a - b).abs() / b.abs() };
    let mut j: f64 = 0.0;
    let mut i: f64 = 0.0;
    let grid = common::bessel_grid();
    for &(m, x) in &grid {
        j = j.max(rel(bessel_j(m, x)?, common::bessel_j_oracle(m, x)));
        i = i.max(rel(bessel_i(m, x)?, common::bessel_i_oracle(m, x)));
    }
    Ok(Outcome {
        passed: grid.len() == 1000 && within(j, 1e-12) && within(i, 1e-12),
        detail: format!("{} points, J_rel={j:.3e}, I_rel={i:.3e} (tol 1e-12)", grid.len()),
    })
}

const EXAMPLES: &[&[&str]] = &[
    &["state", "--family", "london", "--alpha", "2.0", "--dim", "64", "--format", "csv"],
    &["propagate", "--lattice", "uniform", "--input-waveguide", "0", "--zmax", "5", "--dim", "64"],
    &["state", "--family", "london", "--alpha", "1+2i"],
    &["verify", "--suite", "algebra", "--dim", "64"],
    &["impulse", "--lattice", "su11", "--zmax", "1", "--dim", "400"],
    &["state", "--family", "phase", "--phi", "0", "--dim", "4"],
    &["--format", "json", "state", "--family", "bg", "--alpha", "0.5-0.25i", "--dim", "16"],
    &["--format", "json", "propagate", "--lattice", "su11", "--zmax", "0.5", "--samples", "20"],
    &["bch-check", "--random", "5", "--seed", "3"],
    &["bch-check", "--plus", "0.2i", "--zero", "0.6+0.8i", "--minus", "-0.1", "--ordering", "normal"],
];

fn cli_determinism() -> fockphase::Result<Outcome> {
    let exe = env!("CARGO_BIN_EXE_fockphase");
    let mut differing = Vec::new();
    for args in EXAMPLES {
        let a = Command::new(exe).args(*args).output().expect("binary runs");
        let b = Command::new(exe).args(*args).output().expect("binary runs");
        let silent = a.stdout.is_empty() && a.stderr.is_empty();
        if a.stdout != b.stdout || a.stderr != b.stderr || a.status.code() != b.status.code() || silent {
            differing.push(args.join(" "));
        }
    }
    Ok(Outcome {
        passed: differing.is_empty(),
        detail: if differing.is_empty() {
            format!("{} commands byte-identical", EXAMPLES.len())
        } else {
            format!("differing: {}", differing.join("; "))
        },
    })
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("uniform lattice impulse response", uniform_impulse),
        ("su11 lattice impulse response", su11_impulse),
        ("disentangling identity, 50 random sets", bch_identity),
        ("phase state forms and shift eigenvalue", phase_equivalence),
        ("eigenvalue relations", eigenvalue_relations),
        ("state form equivalences", state_forms),
        ("rotation conjugation identity", rotation_identity),
        ("normalizations", normalizations),
        ("special functions vs series oracle", special_functions),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = match f() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("{} {:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" }, n + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
