//! The three subcommands as library functions.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use gausswig::field::{distance, sup_distance};
use gausswig::wigner::{product_gamma2_inner, wigner_product};
use gausswig::{
    compose, schrodinger_apply, to_gamma2, tower_embed, wigner_transform, Extend, ExtendKind,
    Layout, ProductState, ScalingLaw, TraceClassSpectrum,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{RunConfig, MAX_DENSE_LEVEL};
use crate::report::{Entry, Report};
use crate::states::{parse_state, random_element, random_state};
use crate::suite::{self, Unitary};
use crate::CliError;

/// Slack for the two measure inequalities, independent of the config.
pub const BOUNDS_TOLERANCE: f64 = 1e-12;
/// Allowed distance of the recovery slope from 2.
pub const SLOPE_TOLERANCE: f64 = 0.1;
/// Tolerance for linearity of the measure transform on atomic measures.
pub const LINEARITY_TOLERANCE: f64 = 1e-13;
/// Largest imaginary residue accepted for `Wig(φ, φ)`.
pub const SELF_ADJOINT_TOLERANCE: f64 = 1e-8;
/// Threshold above which the printed `S` counts as breaking the top square.
pub const ERRATUM_THRESHOLD: f64 = 0.1;

/// A per-check random stream derived from the run seed and the check id.
pub fn check_rng(seed: u64, id: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in id.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100000001b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

type Job = Box<dyn Fn() -> Result<f64, CliError> + Send + Sync>;

struct Cell {
    id: String,
    anchor: &'static str,
    params: Value,
    tolerance: f64,
    job: Job,
}

impl Cell {
    fn new(id: &str, anchor: &'static str, params: Value, tolerance: f64, job: impl Fn() -> Result<f64, CliError> + Send + Sync + 'static) -> Self {
        Self {
            id: id.into(),
            anchor,
            params,
            tolerance,
            job: Box::new(job),
        }
    }

    fn run(&self) -> Entry {
        match (self.job)() {
            Ok(r) => Entry::measured(&self.id, self.anchor, self.params.clone(), r, self.tolerance),
            Err(e) => Entry::errored(&self.id, self.anchor, self.params.clone(), self.tolerance, e.to_string()),
        }
    }
}

fn execute(cells: Vec<Cell>) -> Vec<Entry> {
    cells.par_iter().map(Cell::run).collect()
}

/// Dense truncation levels exercised by the pipeline checks.
fn dense_levels(cfg: &RunConfig) -> Vec<usize> {
    (1..=cfg.truncation.min(2)).collect()
}

fn max_over_levels(levels: &[usize], mut f: impl FnMut(usize) -> Result<f64, CliError>) -> Result<f64, CliError> {
    levels.iter().try_fold(0.0f64, |w, &m| Ok(w.max(f(m)?)))
}

/// Builds and runs every check of the verification suite.
pub fn run_verify(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let s = cfg.spectrum()?;
    let variant = cfg.variant()?;
    let (tc, tp) = (cfg.tolerances.closed_form, cfg.tolerances.pipeline);
    let seed = cfg.seed;
    let levels = dense_levels(cfg);
    let mut cells = Vec::new();

    let ts = vec![0.1, 0.5, 1.0, 2.0, 4.0];
    let vs = vec![0.0, 0.5, 1.0, 2.0, 3.0];
    cells.push(Cell::new(
        "gaussian.char_function",
        "gaussian/characteristic-function",
        json!({"t": ts, "v": vs}),
        tc,
        move || suite::char_function(&ts, &vs),
    ));
    cells.push(Cell::new(
        "gaussian.scaling_law",
        "gaussian/scaling-law",
        json!({"t": [0.25, 0.5, 1.0, 2.0], "a": [0.5, 1.0, 2.0, 3.0], "law": "corrected"}),
        tc,
        || suite::scaling_law(&[0.25, 0.5, 1.0, 2.0], &[0.5, 1.0, 2.0, 3.0], ScalingLaw::Corrected),
    ));
    {
        let s = s.clone();
        cells.push(Cell::new(
            "gaussian.cameron_martin",
            "gaussian/cameron-martin",
            json!({"t": s.values()[0], "xi": 1.0, "degrees": "0..=4"}),
            tp,
            move || suite::cameron_martin(&s, 1.0),
        ));
    }

    cells.push(Cell::new(
        "measure_ft.sup_bound",
        "measure-ft/boundedness",
        json!({"trials": 1000, "dim": 2, "seed": seed}),
        BOUNDS_TOLERANCE,
        move || Ok(suite::bounds_trials(&mut check_rng(seed, "measure_ft.bounds"), 1000)?.sup_violation),
    ));
    cells.push(Cell::new(
        "measure_ft.continuity_bound",
        "measure-ft/continuity-inequality",
        json!({"trials": 1000, "dim": 2, "seed": seed}),
        BOUNDS_TOLERANCE,
        move || Ok(suite::bounds_trials(&mut check_rng(seed, "measure_ft.bounds"), 1000)?.continuity_violation),
    ));
    cells.push(Cell::new(
        "measure_ft.recovery_slope",
        "measure-ft/injectivity-recovery",
        json!({"steps": suite::RECOVERY_STEPS, "target_slope": 2.0}),
        SLOPE_TOLERANCE,
        || Ok((suite::recovery_convergence()?.1 - 2.0).abs()),
    ));
    cells.push(Cell::new(
        "measure_ft.linearity",
        "measure-ft/definition",
        json!({"trials": 100, "seed": seed}),
        LINEARITY_TOLERANCE,
        move || suite::ft_linearity(&mut check_rng(seed, "measure_ft.linearity"), 100),
    ));

    if cfg.truncation >= 1 {
        let one = cfg.layout();
        let lvl = json!(levels);
        let layouts: Vec<(usize, Layout)> = levels.iter().map(|&m| (m, cfg.dense_layout(m))).collect();
        let layout_of = move |m: usize| layouts.iter().find(|(k, _)| *k == m).map(|(_, l)| *l).expect("level");

        let ts = vec![0.25, 0.5, 1.0, 2.0];
        let closed = {
            let ts = ts.clone();
            move || suite::gaussian_symbol_closed_form(&ts, &one)
        };
        let closed2 = closed.clone();
        cells.push(Cell::new(
            "weyl.gaussian_symbol",
            "weyl/gaussian-symbol-closed-form",
            json!({"t": ts, "points": one.points}),
            tp,
            move || Ok(closed()?.0),
        ));
        cells.push(Cell::new(
            "weyl.roundtrip",
            "weyl/symbol-kernel-roundtrip",
            json!({"t": ts, "points": one.points}),
            tc,
            move || Ok(closed2()?.1),
        ));

        for (op, id, anchor) in [
            (Unitary::T, "unitarity.t", "weyl/symbol-kernel-unitary"),
            (Unitary::S(variant), "unitarity.s", "weyl/spectral-rescaling"),
            (Unitary::U, "unitarity.u", "weyl/gaussian-reweighting"),
            (Unitary::Pi, "unitarity.pi", "heisenberg/schrodinger-representation"),
            (Unitary::Tower, "unitarity.tower", "heisenberg/tower-embedding"),
        ] {
            let tower = matches!(op, Unitary::Tower);
            let lv: Vec<usize> = levels.iter().copied().filter(|&m| !tower || m < s.len()).collect();
            let (s, lo) = (s.clone(), layout_of.clone());
            let state_only = matches!(op, Unitary::Pi | Unitary::Tower);
            cells.push(Cell::new(
                id,
                anchor,
                json!({"levels": lv, "trials": 50, "variant": variant.as_str(), "seed": seed}),
                tp,
                move || {
                    let mut rng = check_rng(seed, id);
                    max_over_levels(&lv, |m| suite::unitarity(op, &mut rng, &s, m, &if state_only { one } else { lo(m) }, 50))
                },
            ));
        }

        {
            let (s, lv) = (s.clone(), levels.clone());
            cells.push(Cell::new(
                "heisenberg.homomorphism",
                "heisenberg/representation-homomorphism",
                json!({"levels": lvl, "pairs": 100, "seed": seed}),
                tp,
                move || {
                    let mut rng = check_rng(seed, "heisenberg.homomorphism");
                    max_over_levels(&lv, |m| suite::homomorphism(&mut rng, &s, m, &one, 100))
                },
            ));
        }
        {
            let dyadic = suite::is_dyadic(&s);
            let tol = if dyadic { 0.0 } else { 1e-14 };
            let (s, m) = (s.clone(), cfg.truncation);
            cells.push(Cell::new(
                "heisenberg.group_axioms",
                "heisenberg/group-law",
                json!({"m": m, "trials": 200, "dyadic_spectrum": dyadic, "seed": seed}),
                tol,
                move || suite::group_axioms(&mut check_rng(seed, "heisenberg.group_axioms"), &s, m, 200),
            ));
        }
        {
            let (s, lv) = (s.clone(), levels.clone());
            let moyal_layout = move |m: usize| if m >= 2 { Layout { points: 16, ..one } } else { one };
            cells.push(Cell::new(
                "wigner.moyal",
                "wigner/moyal-orthogonality",
                json!({"levels": lvl, "max_degree": 3}),
                tp,
                move || max_over_levels(&lv, |m| suite::moyal(&s, m, &moyal_layout(m), 3)),
            ));
        }
        {
            let (s, lv, lo) = (s.clone(), levels.clone(), layout_of.clone());
            cells.push(Cell::new(
                "wigner.reconstruction",
                "wigner/quantizer-reconstruction",
                json!({"levels": lvl, "pairs": 20, "seed": seed}),
                tp,
                move || {
                    let mut rng = check_rng(seed, "wigner.reconstruction");
                    max_over_levels(&lv, |m| suite::reconstruction(&mut rng, &s, m, &lo(m), 20))
                },
            ));
        }
        {
            let (s, lv, lo) = (s.clone(), levels.clone(), layout_of.clone());
            cells.push(Cell::new(
                "wigner.quantizer_duality",
                "wigner/quantizer-duality",
                json!({"levels": lvl, "trials": 5, "seed": seed}),
                tp,
                move || {
                    let mut rng = check_rng(seed, "wigner.quantizer_duality");
                    max_over_levels(&lv, |m| suite::quantizer_duality(&mut rng, &s, m, &lo(m), 5))
                },
            ));
        }
        {
            let (s1, lv, lo) = (s.clone(), levels.clone(), layout_of.clone());
            let route = move |m: usize| suite::route_equivalence(&s1, m, &one, &lo(m), &suite::hermite_pairs(m, if m == 1 { 3 } else { 1 }));
            let route2 = route.clone();
            let lv2 = lv.clone();
            cells.push(Cell::new(
                "wigner.route_equivalence",
                "wigner/ambiguity-fourier-route",
                json!({"levels": lvl, "calibration": "vacuum, one axis pair"}),
                tp * 10.0,
                move || max_over_levels(&lv, |m| Ok(route(m)?.discrepancy)),
            ));
            cells.push(Cell::new(
                "wigner.calibration_stability",
                "wigner/ambiguity-fourier-route",
                json!({"level": 1, "pairs": "hermite degree <= 3", "expected_constant": gausswig::Calibration::expected()}),
                tp,
                move || max_over_levels(&lv2[..1], |m| Ok(route2(m)?.stability)),
            ));
        }
        {
            let top = cfg.truncation.min(MAX_DENSE_LEVEL).min(s.len());
            let tower_layout = cfg.dense_layout(top.max(2));
            let lv: Vec<usize> = (1..=top).collect();
            let s2 = s.clone();
            cells.push(Cell::new(
                "wigner.gamma2_vacuum",
                "wigner/gamma2-identification",
                json!({"levels": lv}),
                tp,
                {
                    let (s, lv) = (s.clone(), lv.clone());
                    move || max_over_levels(&lv, |m| suite::gamma2_vacuum(&s, m, &if m == 1 { one } else { tower_layout }))
                },
            ));
            if s.len() >= 2 {
                let pl = cfg.dense_layout(2);
                cells.push(Cell::new(
                    "wigner.tower_pairing",
                    "wigner/gamma2-tower",
                    json!({"trials": 3, "points": pl.points, "seed": seed}),
                    tp,
                    move || suite::tower_pairing(&mut check_rng(seed, "wigner.tower_pairing"), &s2, &pl, 3),
                ));
            }
        }
    }

    if cfg.truncation >= 2 {
        let layout = cfg.dense_layout(2);
        let s2 = s.truncate(2)?;
        let diag = {
            let s2 = s2.clone();
            move || suite::diagram(&s2, &layout, &suite::diagram_inputs(&s2, &layout)?, variant)
        };
        for (k, name) in ["top", "middle", "bottom"].iter().enumerate() {
            let d = diag.clone();
            cells.push(Cell::new(
                &format!("weyl.diagram_{name}"),
                "weyl/extension-diagram",
                json!({"m": 2, "t": s2.values(), "variant": variant.as_str(), "inputs": ["vacuum", "wig(h1,h2)", "wig(h3,h0)"]}),
                tp,
                move || Ok(d()?[k]),
            ));
        }
        cells.push(Cell::new(
            "weyl.printed_s_breaks_top_square",
            "weyl/spectral-rescaling-erratum",
            json!({"m": 2, "t": [0.5, 0.5], "residual": "threshold / top-square residual", "threshold": ERRATUM_THRESHOLD}),
            1.0,
            move || Ok(ERRATUM_THRESHOLD / suite::printed_top_square(&layout)?),
        ));
    }

    let entries = execute(cells);
    Ok(Report::new(entries, start.elapsed().as_secs_f64()))
}

/// Per-level tower checks up to `m_max` axis pairs.
pub fn run_tower(cfg: &RunConfig, m_max: usize) -> Result<Report, CliError> {
    cfg.validate()?;
    let s = cfg.spectrum()?;
    if m_max == 0 || m_max > s.len() {
        return Err(CliError::Config(format!("m_max must lie in 1..={}, got {m_max}", s.len())));
    }
    let start = Instant::now();
    let tol = cfg.tolerances.pipeline;
    let seed = cfg.seed;
    let layout = cfg.dense_layout(m_max);
    let mut cells = Vec::new();
    for level in 1..=m_max {
        let lv = json!({"level": level, "points": layout.points, "radius_sigmas": layout.radius_sigmas, "seed": seed});
        let s1 = s.clone();
        cells.push(Cell::new(
            &format!("tower.isometry.m{level}"),
            "heisenberg/tower-embedding",
            lv.clone(),
            tol,
            move || tower_isometry(&s1, level, &layout, seed),
        ));
        let s1 = s.clone();
        cells.push(Cell::new(
            &format!("tower.intertwining.m{level}"),
            "heisenberg/tower-intertwining",
            lv.clone(),
            tol,
            move || tower_intertwining(&s1, level, &layout, seed),
        ));
        let s1 = s.clone();
        cells.push(Cell::new(
            &format!("tower.extension.m{level}"),
            "wigner/gamma2-tower",
            lv.clone(),
            tol,
            move || tower_extension(&s1, level, &layout, seed),
        ));
        let s1 = s.clone();
        cells.push(Cell::new(
            &format!("tower.gamma2_vacuum.m{level}"),
            "wigner/gamma2-identification",
            lv,
            tol,
            move || suite::gamma2_vacuum(&s1, level, &layout),
        ));
    }
    let entries = execute(cells);
    Ok(Report::new(entries, start.elapsed().as_secs_f64()))
}

const TOWER_TRIALS: usize = 5;

/// `|‖ι φ‖ − ‖φ‖|` from `level − 1` to `level`; level one embeds into itself.
fn tower_isometry(s: &TraceClassSpectrum, level: usize, layout: &Layout, seed: u64) -> Result<f64, CliError> {
    let mut rng = check_rng(seed, &format!("tower.isometry.m{level}"));
    let from = level.saturating_sub(1).max(1);
    let grid = layout.state_grid(s, from)?;
    let mut worst: f64 = 0.0;
    for _ in 0..TOWER_TRIALS {
        let phi = random_state(&mut rng, s, &grid, suite::STATE_DEGREE)?;
        let up = tower_embed(&phi, level, s)?;
        worst = worst.max((up.norm() - phi.norm()).abs());
        if from == level {
            worst = worst.max(distance(&up, &phi)?);
        }
    }
    Ok(worst)
}

/// `‖π(g ⊕ 0) ι φ − ι π(g) φ‖`.
fn tower_intertwining(s: &TraceClassSpectrum, level: usize, layout: &Layout, seed: u64) -> Result<f64, CliError> {
    let mut rng = check_rng(seed, &format!("tower.intertwining.m{level}"));
    let from = level.saturating_sub(1).max(1);
    let grid = layout.state_grid(s, from)?;
    let mut worst: f64 = 0.0;
    for _ in 0..TOWER_TRIALS {
        let phi = random_state(&mut rng, s, &grid, suite::STATE_DEGREE)?;
        let g = random_element(&mut rng, s, from, suite::GROUP_REACH)?;
        let lhs = schrodinger_apply(&g.padded(level)?, &tower_embed(&phi, level, s)?, s)?;
        let rhs = tower_embed(&schrodinger_apply(&g, &phi, s)?, level, s)?;
        worst = worst.max(distance(&lhs, &rhs)?);
        let h = random_element(&mut rng, s, from, suite::GROUP_REACH)?;
        let gh = compose(&g, &h, s)?.padded(level)?;
        let padded = compose(&g.padded(level)?, &h.padded(level)?, s)?;
        worst = worst.max(gh.max_abs_diff(&padded));
    }
    Ok(worst)
}

/// `‖Wig_m(ιφ, ιψ) − ι Wig_{m−1}(φ, ψ)‖_Γ₂`; dense up to two pairs, product form at three.
fn tower_extension(s: &TraceClassSpectrum, level: usize, layout: &Layout, seed: u64) -> Result<f64, CliError> {
    let mut rng = check_rng(seed, &format!("tower.extension.m{level}"));
    if level == 1 {
        let grid = layout.state_grid(s, 1)?;
        let phi = random_state(&mut rng, s, &grid, suite::STATE_DEGREE)?;
        let w = to_gamma2(&wigner_transform(&phi, &phi, s)?, s)?;
        let again = to_gamma2(&wigner_transform(&tower_embed(&phi, 1, s)?, &phi, s)?, s)?;
        return Ok(distance(&w, &again)?);
    }
    let mut worst: f64 = 0.0;
    for _ in 0..TOWER_TRIALS.min(3) {
        if level == 2 {
            let grid = layout.state_grid(s, 1)?;
            let phi = random_state(&mut rng, s, &grid, suite::STATE_DEGREE)?;
            let psi = random_state(&mut rng, s, &grid, suite::STATE_DEGREE)?;
            let base = to_gamma2(&wigner_transform(&phi, &psi, s)?, s)?;
            let lifted = wigner_transform(&tower_embed(&phi, 2, s)?, &tower_embed(&psi, 2, s)?, s)?;
            let ext = base.extend(ExtendKind::Iota, s, layout)?;
            worst = worst.max(distance(&to_gamma2(&lifted, s)?, &ext)?);
            worst = worst.max((ext.norm() - base.norm()).abs());
        } else {
            use rand::Rng;
            let mut pick = || -> Result<ProductState, CliError> {
                let alpha: Vec<usize> = (0..level - 1).map(|_| rng.gen_range(0..=suite::STATE_DEGREE)).collect();
                Ok(ProductState::hermite(s, &alpha, layout)?)
            };
            let (p, q) = (pick()?, pick()?);
            let base = wigner_product(&p, &q)?.to_gamma2(s)?;
            let ext = base.extend_constant(s, layout)?;
            let lifted = wigner_product(&p.embed(level, s, layout)?, &q.embed(level, s, layout)?)?.to_gamma2(s)?;
            let d2 = product_gamma2_inner(&lifted, &lifted)? + product_gamma2_inner(&ext, &ext)?
                - product_gamma2_inner(&lifted, &ext)? * 2.0;
            worst = worst.max(d2.re.max(0.0).sqrt());
            let n0 = product_gamma2_inner(&base, &base)?.re.sqrt();
            let n1 = product_gamma2_inner(&ext, &ext)?.re.sqrt();
            worst = worst.max((n1 - n0).abs());
        }
    }
    Ok(worst)
}

/// Result of a Wigner export.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WignerSummary {
    pub m: usize,
    pub lebesgue_csv: PathBuf,
    pub gamma2_csv: PathBuf,
    /// `‖Wig(φ, ψ)‖` (Lebesgue picture).
    pub symbol_norm: f64,
    /// `‖φ‖·‖ψ‖`.
    pub state_norms: f64,
    /// `|‖Wig(φ, ψ)‖ − ‖φ‖‖ψ‖|`.
    pub moyal_residual: f64,
    /// Largest imaginary part, reported when both specs coincide.
    pub max_imaginary: Option<f64>,
    pub pass: bool,
}

/// Writes `Wig(φ, ψ)` in both pictures as `wigner_lebesgue.csv` and
/// `wigner_gamma2.csv` under `out_dir`.
pub fn run_wigner(cfg: &RunConfig, spec1: &str, spec2: &str, out_dir: &Path) -> Result<WignerSummary, CliError> {
    cfg.validate()?;
    let m = cfg.truncation;
    if m == 0 || m > MAX_DENSE_LEVEL {
        return Err(CliError::Config(format!("wigner export needs truncation in 1..={MAX_DENSE_LEVEL}, got {m}")));
    }
    let s = cfg.spectrum()?;
    let layout = cfg.dense_layout(m);
    let grid = layout.state_grid(&s, m)?;
    let phi = parse_state(spec1, &s, m, &grid)?;
    let psi = parse_state(spec2, &s, m, &grid)?;
    let w = wigner_transform(&phi, &psi, &s)?;
    let g2 = to_gamma2(&w, &s)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let lebesgue_csv = out_dir.join("wigner_lebesgue.csv");
    let gamma2_csv = out_dir.join("wigner_gamma2.csv");
    for (path, sym) in [(&lebesgue_csv, &w), (&gamma2_csv, &g2)] {
        let f = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut out = BufWriter::new(f);
        sym.write_csv(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let symbol_norm = w.norm();
    let state_norms = phi.norm() * psi.norm();
    let moyal_residual = (symbol_norm - state_norms).abs();
    let max_imaginary = (spec1 == spec2).then(|| w.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max));
    let self_adjoint_ok = max_imaginary.is_none_or(|v| v <= SELF_ADJOINT_TOLERANCE);
    Ok(WignerSummary {
        m,
        lebesgue_csv,
        gamma2_csv,
        symbol_norm,
        state_norms,
        moyal_residual,
        max_imaginary,
        pass: moyal_residual <= cfg.tolerances.pipeline && self_adjoint_ok,
    })
}

/// Sup distance of the exported vacuum symbol from its closed form; used by tests.
pub fn vacuum_closed_form_residual(s: &TraceClassSpectrum, layout: &Layout) -> Result<f64, CliError> {
    let grid = layout.state_grid(s, 1)?;
    let vac = gausswig::GridFn::vacuum(grid, vec![s.values()[0]])?;
    let w = wigner_transform(&vac, &vac, s)?;
    Ok(sup_distance(&w, &gausswig::wigner::vacuum_symbol(s, 1, layout)?)?)
}
