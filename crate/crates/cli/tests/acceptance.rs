//! Acceptance suite: one PASS/FAIL line per criterion, parameters and
//! tolerances pinned here. Exits nonzero if any criterion fails.

use std::process::ExitCode;

use gausswig::{Layout, SVariant, TraceClassSpectrum};
use gausswig_cli::run::check_rng;
use gausswig_cli::suite::{self, Unitary};
use gausswig_cli::CliError;

const SEED: u64 = 0;
const BASE: Layout = Layout {
    points: 64,
    radius_sigmas: 10.0,
};
const DENSE: Layout = Layout {
    points: 32,
    radius_sigmas: 8.0,
};

const CHAR_TOL: f64 = 1e-8;
const SYMBOL_TOL: f64 = 1e-6;
const ROUNDTRIP_TOL: f64 = 1e-8;
const DIAGRAM_TOL: f64 = 1e-6;
const PRINTED_MIN: f64 = 0.1;
const UNITARY_TOL: f64 = 1e-6;
const UNITARY_INPUTS: usize = 50;
const HOMOMORPHISM_TOL: f64 = 1e-6;
const HOMOMORPHISM_PAIRS: usize = 100;
const MOYAL_TOL: f64 = 1e-6;
const RECONSTRUCTION_TOL: f64 = 1e-5;
const RECONSTRUCTION_PAIRS: usize = 20;
const ROUTE_TOL: f64 = 1e-5;
const CALIBRATION_TOL: f64 = 1e-6;
const GAMMA2_TOL: f64 = 1e-6;
const TOWER_TOL: f64 = 1e-6;
const BOUNDS_SLACK: f64 = -1e-12;
const BOUNDS_TRIALS: usize = 1000;
const SLOPE_TARGET: f64 = 2.0;
const SLOPE_TOL: f64 = 0.1;

/// A criterion's measured quantities: (label, value, bound, holds).
type Parts = Vec<(&'static str, f64, f64, bool)>;

fn at_most(label: &'static str, v: f64, tol: f64) -> (&'static str, f64, f64, bool) {
    (label, v, tol, v <= tol)
}

fn spectrum() -> TraceClassSpectrum {
    TraceClassSpectrum::new(vec![1.0, 0.5, 0.25]).expect("valid spectrum")
}

fn layout(m: usize) -> Layout {
    if m == 1 {
        BASE
    } else {
        DENSE
    }
}

fn max_over(levels: &[usize], mut f: impl FnMut(usize) -> Result<f64, CliError>) -> Result<f64, CliError> {
    levels.iter().try_fold(0.0f64, |acc, &m| Ok(acc.max(f(m)?)))
}

fn characteristic_function() -> Result<Parts, CliError> {
    let ts = [0.1, 0.5, 1.0, 2.0, 4.0];
    let vs = [0.0, 0.5, 1.0, 2.0, 3.0];
    Ok(vec![at_most("sup over 25 (t, v)", suite::char_function(&ts, &vs)?, CHAR_TOL)])
}

fn gaussian_symbol() -> Result<Parts, CliError> {
    let (sup, round) = suite::gaussian_symbol_closed_form(&[0.25, 0.5, 1.0, 2.0], &BASE)?;
    Ok(vec![at_most("closed form", sup, SYMBOL_TOL), at_most("roundtrip", round, ROUNDTRIP_TOL)])
}

fn diagram() -> Result<Parts, CliError> {
    let s = spectrum().truncate(2)?;
    let inputs = suite::diagram_inputs(&s, &DENSE)?;
    let [top, middle, bottom] = suite::diagram(&s, &DENSE, &inputs, SVariant::Corrected)?;
    let printed = suite::printed_top_square(&DENSE)?;
    Ok(vec![
        at_most("top", top, DIAGRAM_TOL),
        at_most("middle", middle, DIAGRAM_TOL),
        at_most("bottom", bottom, DIAGRAM_TOL),
        ("printed top (must exceed)", printed, PRINTED_MIN, printed > PRINTED_MIN),
    ])
}

fn unitarity() -> Result<Parts, CliError> {
    let s = spectrum();
    let mut parts = Vec::new();
    for (op, label, state_only) in [
        (Unitary::T, "T", false),
        (Unitary::S(SVariant::Corrected), "S", false),
        (Unitary::U, "U", false),
        (Unitary::Pi, "pi", true),
        (Unitary::Tower, "iota", true),
    ] {
        let mut rng = check_rng(SEED, label);
        let worst = max_over(&[1, 2], |m| {
            let l = if state_only { BASE } else { layout(m) };
            suite::unitarity(op, &mut rng, &s, m, &l, UNITARY_INPUTS)
        })?;
        parts.push(at_most(label, worst, UNITARY_TOL));
    }
    Ok(parts)
}

fn heisenberg() -> Result<Parts, CliError> {
    let s = spectrum();
    let mut rng = check_rng(SEED, "homomorphism");
    let hom = max_over(&[1, 2], |m| suite::homomorphism(&mut rng, &s, m, &BASE, HOMOMORPHISM_PAIRS))?;
    let axioms = suite::group_axioms(&mut check_rng(SEED, "group"), &s, 3, 200)?;
    Ok(vec![
        at_most("homomorphism", hom, HOMOMORPHISM_TOL),
        ("group axioms (exact)", axioms, 0.0, axioms == 0.0),
    ])
}

fn moyal() -> Result<Parts, CliError> {
    let s = spectrum();
    let r = max_over(&[1, 2], |m| {
        let l = if m == 1 { BASE } else { Layout { points: 16, ..BASE } };
        suite::moyal(&s, m, &l, 3)
    })?;
    Ok(vec![at_most("|alpha| <= 3", r, MOYAL_TOL)])
}

fn reconstruction() -> Result<Parts, CliError> {
    let s = spectrum();
    let mut rng = check_rng(SEED, "reconstruction");
    let r = max_over(&[1, 2], |m| suite::reconstruction(&mut rng, &s, m, &layout(m), RECONSTRUCTION_PAIRS))?;
    Ok(vec![at_most("Op(Wig) = rank one", r, RECONSTRUCTION_TOL)])
}

fn fourier_route() -> Result<Parts, CliError> {
    let s = spectrum();
    let one = suite::route_equivalence(&s, 1, &BASE, &BASE, &suite::hermite_pairs(1, 3))?;
    let two = suite::route_equivalence(&s, 2, &BASE, &DENSE, &suite::hermite_pairs(2, 1))?;
    Ok(vec![
        at_most("route discrepancy", one.discrepancy.max(two.discrepancy), ROUTE_TOL),
        at_most("calibration stability", one.stability, CALIBRATION_TOL),
    ])
}

fn gamma2() -> Result<Parts, CliError> {
    let s = spectrum();
    let vac = max_over(&[1, 2, 3], |m| suite::gamma2_vacuum(&s, m, &layout(m)))?;
    let tower = suite::tower_pairing(&mut check_rng(SEED, "tower"), &s, &DENSE, 3)?;
    Ok(vec![at_most("vacuum norm, levels 1..3", vac, GAMMA2_TOL), at_most("tower pairing", tower, TOWER_TOL)])
}

fn measure_ft() -> Result<Parts, CliError> {
    let b = suite::bounds_trials(&mut check_rng(SEED, "bounds"), BOUNDS_TRIALS)?;
    let worst_slack = -b.sup_violation.max(b.continuity_violation);
    let (_, slope) = suite::recovery_convergence()?;
    Ok(vec![
        ("bounds slack (must be >=)", worst_slack, BOUNDS_SLACK, worst_slack >= BOUNDS_SLACK),
        ("recovery slope - 2", (slope - SLOPE_TARGET).abs(), SLOPE_TOL, (slope - SLOPE_TARGET).abs() <= SLOPE_TOL),
    ])
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Parts, CliError>); 10] = [
        ("gaussian characteristic function", characteristic_function),
        ("closed-form gaussian symbol", gaussian_symbol),
        ("extension diagram commutes", diagram),
        ("unitarity of T, S, U, pi, iota", unitarity),
        ("heisenberg representation", heisenberg),
        ("moyal orthogonality", moyal),
        ("quantizer reconstruction", reconstruction),
        ("ambiguity fourier route", fourier_route),
        ("gamma2 identification and tower", gamma2),
        ("measure fourier transform bounds", measure_ft),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(parts) => {
                let ok = parts.iter().all(|p| p.3);
                failed += usize::from(!ok);
                println!("{} [{}] {name}", if ok { "PASS" } else { "FAIL" }, n + 1);
                for (label, v, bound, holds) in parts {
                    println!("    {} {label}: {v:e} vs {bound:e}", if holds { "ok  " } else { "FAIL" });
                }
            }
            Err(e) => {
                failed += 1;
                println!("FAIL [{}] {name}: {e}", n + 1);
            }
        }
    }
    println!("{}/10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
