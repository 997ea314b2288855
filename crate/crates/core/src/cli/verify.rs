//! Named invariant checks grouped into suites for the `verify` command.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{
    commutator_residuals, deformed_lowering_residual, phase_operators, phase_unitarity_residuals, reorder,
    rotation_conjugation_check, su11_generators, verify_bch_with, BchCheck, BchParams,
};
use crate::error::Result;
use crate::fock::FockVector;
use crate::lattice::{compare_to_oracle, impulse_profile, propagate, LatticeKind, LatticeSpec};
use crate::specfun::{bessel_i, bessel_i_eval, bessel_j_eval, bessel_j_sequence, MAX_ARGUMENT, MAX_ORDER};
use crate::states::{
    bg_state, bg_state_ordered, deformed_annihilation, deformed_annihilation_su11, eigen_residual, london_state,
    london_state_ordered, phase_state, phase_state_perelomov, su11_perelomov_state,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Specfun,
    Algebra,
    States,
    Lattice,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Algebra => "algebra",
            Suite::States => "states",
            Suite::Lattice => "lattice",
            Suite::All => "all",
        }
    }
}

/// Runs a suite. `dim` sizes the operator checks of the algebra suite; the
/// other suites use fixed sizes.
pub fn run_suite(suite: Suite, dim: usize) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Specfun => specfun_checks()?,
        Suite::Algebra => algebra_checks(dim)?,
        Suite::States => state_checks()?,
        Suite::Lattice => lattice_checks()?,
        Suite::All => {
            let mut all = specfun_checks()?;
            all.extend(algebra_checks(dim)?);
            all.extend(state_checks()?);
            all.extend(lattice_checks()?);
            all
        }
    })
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

pub fn specfun_checks() -> Result<Vec<Check>> {
    let mut recurrence: f64 = 0.0;
    let mut norm_sum: f64 = 0.0;
    for x in grid(0.1, 20.0, 60) {
        let j = bessel_j_sequence(121, x)?;
        for m in 1..=60 {
            let r = (j[m - 1] + j[m + 1] - 2.0 * m as f64 / x * j[m]).abs() / j[m].abs().max(1.0);
            recurrence = recurrence.max(r);
        }
        let s = j[0] + 2.0 * (1..=60).map(|m| j[2 * m]).sum::<f64>();
        norm_sum = norm_sum.max((s - 1.0).abs());
    }

    let mut london: f64 = 0.0;
    for z in grid(0.05, 10.0, 40) {
        let terms = (4.0 * z).ceil() as usize + 40;
        let j = bessel_j_sequence(terms + 1, 2.0 * z)?;
        let s: f64 = (0..=terms).map(|m| ((m + 1) as f64 * j[m + 1] / z).powi(2)).sum();
        london = london.max((s - 1.0).abs());
    }

    // I_0(x) + 2 Σ I_k(x) = e^x, and the three-term recurrence for I
    let mut i_sum: f64 = 0.0;
    let mut i_rec: f64 = 0.0;
    for x in grid(0.5, 20.0, 40) {
        let vals: Vec<f64> = (0..=120).map(|m| bessel_i(m, x)).collect::<Result<_>>()?;
        let s = vals[0] + 2.0 * vals[1..].iter().sum::<f64>();
        i_sum = i_sum.max((s / x.exp() - 1.0).abs());
        for m in 1..60 {
            let r = (vals[m - 1] - vals[m + 1] - 2.0 * m as f64 / x * vals[m]).abs() / vals[m - 1];
            i_rec = i_rec.max(r);
        }
    }

    let est = bessel_j_eval(MAX_ORDER, MAX_ARGUMENT)?
        .est_rel_error
        .max(bessel_i_eval(MAX_ORDER, MAX_ARGUMENT)?.est_rel_error);

    Ok(vec![
        Check::new("specfun.j_recurrence", recurrence, 1e-11),
        Check::new("specfun.j_even_sum", norm_sum, 1e-10),
        Check::new("specfun.london_sum", london, 1e-10),
        Check::new("specfun.i_exponential_sum", i_sum, 1e-12),
        Check::new("specfun.i_recurrence", i_rec, 1e-11),
        Check::new("specfun.error_estimate", est, 1e-12),
    ])
}

pub fn algebra_checks(dim: usize) -> Result<Vec<Check>> {
    let g = su11_generators(dim)?;
    let p = phase_operators(dim)?;
    let comm = commutator_residuals(&g)?;
    let (right, left) = phase_unitarity_residuals(&p)?;
    let phi = 0.7;
    let b = BchParams::antinormal(Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, phi), Complex64::new(0.0, 0.0))?;
    let bch = verify_bch_with(&b, &BchCheck::new(dim))?;
    let back = reorder(&bch.converted)?;
    let round_trip = (back.plus - b.plus).norm().max((back.zero - b.zero).norm()).max((back.minus - b.minus).norm());
    let mut out = vec![
        Check::new("algebra.k0_kplus", comm.k0_kplus, 1e-12),
        Check::new("algebra.k0_kminus", comm.k0_kminus, 1e-12),
        Check::new("algebra.kplus_kminus", comm.kplus_kminus, 1e-12),
        Check::new("algebra.right_unitarity", right, 1e-12),
        Check::new("algebra.left_unitarity", left, 0.0),
        Check::new("algebra.deformed_lowering", deformed_lowering_residual(dim)?, 1e-12),
        Check::new("algebra.bch_phase_state", bch.residual, 1e-9),
        Check::new("algebra.bch_round_trip", round_trip, 1e-13),
    ];
    if dim >= 8 {
        out.push(Check::new("algebra.rotation", rotation_conjugation_check(1.0, dim)?, 1e-9));
    }
    Ok(out)
}

pub fn state_checks() -> Result<Vec<Check>> {
    let mut perelomov: f64 = 0.0;
    for phi in [0.0, 0.7, 2.0, PI - 0.1] {
        let a = phase_state(phi, 32)?;
        perelomov = perelomov.max(a.max_deviation(&phase_state_perelomov(phi, 32, 96)?, 32)?);
    }
    let p = phase_operators(128)?;
    let phase_eigen = eigen_residual(&p.v, &phase_state(1.1, 128)?, Complex64::from_polar(1.0, 1.1), 1)?;

    let g = su11_generators(64)?;
    let alpha = Complex64::new(1.0, 0.5);
    let bg_eigen = eigen_residual(&g.kminus, &bg_state(alpha, 64)?, alpha, 1)?;
    let a15 = Complex64::new(1.5, 0.0);
    let bg_forms = bg_state(a15, 32)?.max_deviation(&bg_state_ordered(a15, 32, 64)?, 32)?;
    let london_forms = london_state(2.0, 32)?.max_deviation(&london_state_ordered(2.0, 32, 64)?, 32)?;
    let london_norm = (london_state(3.0, 64)?.norm_sqr() - 1.0).abs();
    let c = deformed_annihilation(1.3, 64)?;
    let deformed_eigen = eigen_residual(&c, &london_state(1.3, 64)?, Complex64::new(1.3, 0.0), 1)?;
    let deformed_forms = c.max_deviation(&deformed_annihilation_su11(1.3, 64)?, 64)?;
    let su11_norm = (su11_perelomov_state(Complex64::new(1.0, 1.0), 0.5, 128)?.norm_sqr() - 1.0).abs();

    Ok(vec![
        Check::new("states.phase_perelomov", perelomov, 1e-8),
        Check::new("states.phase_eigen", phase_eigen, 1e-12),
        Check::new("states.bg_eigen", bg_eigen, 1e-10),
        Check::new("states.bg_forms", bg_forms, 1e-9),
        Check::new("states.london_forms", london_forms, 1e-9),
        Check::new("states.london_norm", london_norm, 1e-10),
        Check::new("states.deformed_eigen", deformed_eigen, 1e-8),
        Check::new("states.deformed_forms", deformed_forms, 1e-12),
        Check::new("states.su11_norm", su11_norm, 1e-10),
    ])
}

pub fn lattice_checks() -> Result<Vec<Check>> {
    let uni = LatticeSpec::new(LatticeKind::Uniform, 64);
    let ur = propagate(&uni, &FockVector::basis(64, 0)?, 5.0, 200, 20)?;
    let su = LatticeSpec::new(LatticeKind::Su11, 400);
    let sr = propagate(&su, &FockVector::basis(400, 0)?, 2.0, 200, 40)?;

    let mut analytic: f64 = 0.0;
    for z in grid(0.1, 5.0, 50) {
        let count = (4.0 * z).ceil() as usize + 40;
        let s: f64 = impulse_profile(&uni, 0, z, count)?.iter().map(|c| c.norm_sqr()).sum();
        analytic = analytic.max((s - 1.0).abs());
        let t2 = z.tanh().powi(2);
        let count = ((1e-14f64).ln() / t2.ln()).ceil() as usize + 1;
        let s: f64 = impulse_profile(&su, 0, z, count)?.iter().map(|c| c.norm_sqr()).sum();
        analytic = analytic.max((s - 1.0).abs());
    }

    Ok(vec![
        Check::new("lattice.uniform_oracle", compare_to_oracle(&ur, &uni)?, 1e-8),
        Check::new("lattice.uniform_norm_drift", ur.norm_drift, 1e-10),
        Check::new("lattice.su11_oracle", compare_to_oracle(&sr, &su)?, 1e-8),
        Check::new("lattice.su11_norm_drift", sr.norm_drift, 1e-10),
        Check::new("lattice.su11_edge_leakage", sr.edge_leakage, 1e-12),
        Check::new("lattice.analytic_norm", analytic, 1e-10),
    ])
}
