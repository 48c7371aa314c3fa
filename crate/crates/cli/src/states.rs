//! State specifications (`vacuum`, `hermite:…`, `shifted-vacuum:…`) and
//! seeded random test inputs.

use gausswig::{
    exp_theta, hermite_state, schrodinger_apply, Complex64, Grid, GridFn, HeisenbergElement,
    Kernel, MeasureTag, PhasePoint, Symbol, TraceClassSpectrum,
};
use rand::Rng;

use crate::CliError;

/// Parses a state specification on `m` axes and samples it on `grid`.
///
/// Accepted forms: `vacuum`, `hermite:α₁,…,α_m` and
/// `shifted-vacuum:ξ₁,…,ξ_m,η₁,…,η_m` (the vacuum moved by `π(exp θ(ξ, η))`).
pub fn parse_state(spec: &str, s: &TraceClassSpectrum, m: usize, grid: &Grid) -> Result<GridFn, CliError> {
    let bad = |why: &str| CliError::Config(format!("state spec {spec:?}: {why}"));
    let (kind, args) = match spec.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a)),
        None => (spec.trim(), None),
    };
    match (kind, args) {
        ("vacuum", None) => Ok(hermite_state(s, &vec![0; m], grid)?),
        ("hermite", Some(a)) => {
            let alpha = a
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad("expected non-negative integer degrees"))?;
            if alpha.len() != m {
                return Err(bad(&format!("expected {m} degrees, got {}", alpha.len())));
            }
            Ok(hermite_state(s, &alpha, grid)?)
        }
        ("shifted-vacuum", Some(a)) => {
            let v = a
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad("expected real coordinates"))?;
            if v.len() != 2 * m || v.iter().any(|x| !x.is_finite()) {
                return Err(bad(&format!("expected {} finite coordinates, got {}", 2 * m, v.len())));
            }
            let p = PhasePoint::new(v[..m].to_vec(), v[m..].to_vec())?;
            let vac = hermite_state(s, &vec![0; m], grid)?;
            Ok(schrodinger_apply(&exp_theta(&p), &vac, s)?)
        }
        _ => Err(bad("expected vacuum, hermite:α… or shifted-vacuum:ξ…,η…")),
    }
}

/// All multi-indices on `m` axes with total degree at most `max_degree`, graded.
pub fn multi_indices(m: usize, max_degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for total in 0..=max_degree {
        let mut cur = vec![0; m];
        fill(&mut out, &mut cur, 0, total);
    }
    out
}

fn fill(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, k: usize, left: usize) {
    if k + 1 >= cur.len() {
        if let Some(last) = cur.last_mut() {
            *last = left;
            out.push(cur.clone());
        } else if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for d in (0..=left).rev() {
        cur[k] = d;
        fill(out, cur, k + 1, left - d);
    }
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A unit-norm random combination of Hermite states of degree ≤ `max_degree`.
pub fn random_state<R: Rng>(
    rng: &mut R,
    s: &TraceClassSpectrum,
    grid: &Grid,
    max_degree: usize,
) -> Result<GridFn, CliError> {
    let m = grid.rank();
    let mut acc: Option<GridFn> = None;
    for alpha in multi_indices(m, max_degree) {
        let h = hermite_state(s, &alpha, grid)?;
        let c = random_complex(rng);
        acc = Some(match acc {
            None => h.scaled(c),
            Some(a) => a.axpy(c, &h)?,
        });
    }
    let a = acc.expect("at least the vacuum index");
    let n = a.norm();
    Ok(a.scaled(Complex64::new(1.0 / n, 0.0)))
}

/// A group element whose translation stays within `reach` standard deviations per axis.
pub fn random_element<R: Rng>(rng: &mut R, s: &TraceClassSpectrum, m: usize, reach: f64) -> Result<HeisenbergElement, CliError> {
    let t = s.leading(m)?;
    let xi = t.iter().map(|tk| rng.gen_range(-reach..reach) / tk.sqrt()).collect();
    let eta = t.iter().map(|tk| rng.gen_range(-reach..reach) / tk.sqrt()).collect();
    Ok(HeisenbergElement::new(xi, eta, rng.gen_range(-3.0..3.0))?)
}

/// Uniform noise on a grid, normalized to unit Lebesgue norm.
pub fn random_symbol<R: Rng>(rng: &mut R, grid: &Grid) -> Result<Symbol, CliError> {
    let values = (0..grid.len()).map(|_| random_complex(rng)).collect();
    let a = Symbol::new(grid.clone(), values, MeasureTag::Lebesgue)?;
    let n = a.norm();
    Ok(a.scaled(Complex64::new(1.0 / n, 0.0)))
}

/// A unit-norm sum of four random Gaussian bumps on a symbol grid with axes
/// `[x…, ξ…]`. Position bumps sit within one axis scale of the origin with
/// widths of 0.5–0.7 scales, frequency bumps within half a scale with widths
/// of 0.4–0.6 scales, so the matching kernel stays inside the state grid.
/// Uniform noise is not suitable: it has components outside the range of the
/// discrete `T⁻¹`.
pub fn random_smooth_symbol<R: Rng>(rng: &mut R, grid: &Grid) -> Result<Symbol, CliError> {
    let axes = grid.axes();
    let mut values = vec![Complex64::default(); grid.len()];
    for _ in 0..4 {
        let c = random_complex(rng);
        let m = axes.len() / 2;
        let shape: Vec<(f64, f64)> = axes
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let (reach, lo, hi) = if k < m { (1.0, 0.5, 0.7) } else { (0.5, 0.4, 0.6) };
                (rng.gen_range(-reach..reach) * a.scale(), rng.gen_range(lo..hi) * a.scale())
            })
            .collect();
        let tables: Vec<Vec<f64>> = axes
            .iter()
            .zip(&shape)
            .map(|(a, &(mu, w))| a.nodes().into_iter().map(|x| (-(x - mu) * (x - mu) / (2.0 * w * w)).exp()).collect())
            .collect();
        let mut prod = vec![1.0];
        for t in &tables {
            prod = prod.iter().flat_map(|p| t.iter().map(move |q| p * q)).collect();
        }
        for (v, p) in values.iter_mut().zip(prod) {
            *v += c * p;
        }
    }
    let a = Symbol::new(grid.clone(), values, MeasureTag::Lebesgue)?;
    let n = a.norm();
    Ok(a.scaled(Complex64::new(1.0 / n, 0.0)))
}

/// Uniform noise kernel, normalized to unit Lebesgue norm.
pub fn random_kernel<R: Rng>(rng: &mut R, grid: &Grid) -> Result<Kernel, CliError> {
    let values = (0..grid.len()).map(|_| random_complex(rng)).collect();
    let k = Kernel::new(grid.clone(), values, MeasureTag::Lebesgue)?;
    let n = k.norm();
    Ok(k.scaled(Complex64::new(1.0 / n, 0.0)))
}
