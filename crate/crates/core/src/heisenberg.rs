//! The Heisenberg group over the eigencoordinates of a trace-class spectrum,
//! its Schrödinger representation on Gaussian `L²`, and the tower embeddings
//! `f ↦ f ⊗ 1`.
//!
//! Group parameters `(ξ, η, s)` are coordinates of `(x, y, s)` in the basis
//! `v_k`, so `(Ax|y) = Σ t_k ξ_k η_k`. The representation acts by
//!
//! ```text
//! (π(ξ, η, s)φ)(v) = ρ_ξ(v)^{1/2} · e^{i(s − Σ v_k η_k + ½ Σ t_k ξ_k η_k)} · φ(v − tξ)
//! ```
//!
//! with `ρ_ξ(v) = exp(Σ v_k ξ_k − ½ Σ t_k ξ_k²)`. The modulation sign is the one
//! that makes `π` a homomorphism for the group law below.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{bail, Result};
use crate::fft::{map_lanes, Shifter};
use crate::field::{compensated_sum, outer, GridFn, MeasureTag};
use crate::gaussian::{ln_gamma_density, TraceClassSpectrum};
use crate::grid::{Grid, Layout};

#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergElement {
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub center: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
}

impl PhasePoint {
    pub fn new(xi: Vec<f64>, eta: Vec<f64>) -> Result<Self> {
        if xi.len() != eta.len() {
            bail!(Argument, "phase point has {} ξ and {} η coordinates", xi.len(), eta.len());
        }
        if xi.iter().chain(&eta).any(|v| !v.is_finite()) {
            bail!(Domain, "phase point coordinates must be finite");
        }
        Ok(Self { xi, eta })
    }

    pub fn dims(&self) -> usize {
        self.xi.len()
    }
}

impl HeisenbergElement {
    pub fn new(xi: Vec<f64>, eta: Vec<f64>, center: f64) -> Result<Self> {
        let p = PhasePoint::new(xi, eta)?;
        if !center.is_finite() {
            bail!(Domain, "center coordinate must be finite");
        }
        Ok(Self {
            xi: p.xi,
            eta: p.eta,
            center,
        })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            xi: vec![0.0; m],
            eta: vec![0.0; m],
            center: 0.0,
        }
    }

    /// A central element `(0, 0, s)`.
    pub fn central(m: usize, s: f64) -> Self {
        Self {
            center: s,
            ..Self::identity(m)
        }
    }

    pub fn dims(&self) -> usize {
        self.xi.len()
    }

    /// Pads with zero coordinates up to `m` axes.
    pub fn padded(&self, m: usize) -> Result<Self> {
        if m < self.dims() {
            bail!(Argument, "cannot pad a {}-axis element to {m} axes", self.dims());
        }
        let mut g = self.clone();
        g.xi.resize(m, 0.0);
        g.eta.resize(m, 0.0);
        Ok(g)
    }

    /// Largest coordinate difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.xi
            .iter()
            .zip(&other.xi)
            .chain(self.eta.iter().zip(&other.eta))
            .map(|(a, b)| (a - b).abs())
            .fold((self.center - other.center).abs(), f64::max)
    }
}

/// `(Ax₁|y₂) = Σ t_k ξ₁ₖ η₂ₖ`.
fn a_pairing(t: &[f64], xi: &[f64], eta: &[f64]) -> f64 {
    t.iter().zip(xi).zip(eta).map(|((t, x), y)| t * x * y).sum()
}

fn check_dims(a: &HeisenbergElement, b: &HeisenbergElement) -> Result<()> {
    if a.dims() != b.dims() {
        bail!(Argument, "group elements have {} and {} axes", a.dims(), b.dims());
    }
    Ok(())
}

/// `(x₁, y₁, s₁)(x₂, y₂, s₂) = (x₁+x₂, y₁+y₂, s₁+s₂+((Ax₁|y₂) − (Ax₂|y₁))/2)`.
pub fn compose(
    g1: &HeisenbergElement,
    g2: &HeisenbergElement,
    s: &TraceClassSpectrum,
) -> Result<HeisenbergElement> {
    check_dims(g1, g2)?;
    let t = s.leading(g1.dims())?;
    let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
    Ok(HeisenbergElement {
        xi: add(&g1.xi, &g2.xi),
        eta: add(&g1.eta, &g2.eta),
        center: g1.center
            + g2.center
            + 0.5 * (a_pairing(t, &g1.xi, &g2.eta) - a_pairing(t, &g2.xi, &g1.eta)),
    })
}

pub fn inverse(g: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement {
        xi: g.xi.iter().map(|v| -v).collect(),
        eta: g.eta.iter().map(|v| -v).collect(),
        center: -g.center,
    }
}

/// Lie bracket `[(x₁, y₁, s₁), (x₂, y₂, s₂)] = (0, 0, (Ax₁|y₂) − (Ax₂|y₁))`.
pub fn commutator(
    g1: &HeisenbergElement,
    g2: &HeisenbergElement,
    s: &TraceClassSpectrum,
) -> Result<HeisenbergElement> {
    check_dims(g1, g2)?;
    let t = s.leading(g1.dims())?;
    Ok(HeisenbergElement::central(
        g1.dims(),
        a_pairing(t, &g1.xi, &g2.eta) - a_pairing(t, &g2.xi, &g1.eta),
    ))
}

/// `θ(x, y) = (x, y, 0)`; the exponential map is the identity in these coordinates.
pub fn exp_theta(p: &PhasePoint) -> HeisenbergElement {
    HeisenbergElement {
        xi: p.xi.clone(),
        eta: p.eta.clone(),
        center: 0.0,
    }
}

/// Guards for the grid translation inside the representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftPolicy {
    /// Largest admissible `|t_k ξ_k|` in units of `√t_k`.
    pub limit_sigmas: f64,
    /// Largest admissible fraction of the norm translated off the grid.
    pub max_leakage: f64,
}

impl Default for ShiftPolicy {
    fn default() -> Self {
        Self {
            limit_sigmas: 4.0,
            max_leakage: 1e-7,
        }
    }
}

/// `π(g)φ` with the default [`ShiftPolicy`].
pub fn schrodinger_apply(
    g: &HeisenbergElement,
    phi: &GridFn,
    s: &TraceClassSpectrum,
) -> Result<GridFn> {
    schrodinger_apply_with(g, phi, s, &ShiftPolicy::default())
}

/// `π(g)φ`. The translation is carried out on `f = φ·γ̃^{1/2}`, which decays,
/// and uses `ρ_ξ(v)^{1/2} γ̃(v − tξ)^{-1/2} = γ̃(v)^{-1/2}`.
pub fn schrodinger_apply_with(
    g: &HeisenbergElement,
    phi: &GridFn,
    s: &TraceClassSpectrum,
    policy: &ShiftPolicy,
) -> Result<GridFn> {
    let m = phi.dims();
    if g.dims() != m {
        bail!(Argument, "element has {} axes, state has {m}", g.dims());
    }
    let tags = phi.variances()?.to_vec();
    let t = s.leading(m)?;
    if t.iter().zip(&tags).any(|(a, b)| (a - b).abs() > 1e-12 * a) {
        bail!(Argument, "state tag {tags:?} does not match the spectrum {t:?}");
    }
    let grid = phi.grid().clone();
    let shifts: Vec<f64> = t.iter().zip(&g.xi).map(|(t, x)| t * x).collect();
    for (k, (&d, &tk)) in shifts.iter().zip(t).enumerate() {
        if d.abs() > policy.limit_sigmas * tk.sqrt() {
            bail!(
                Accuracy,
                "translation {d} on axis {k} exceeds the limit of {} standard deviations",
                policy.limit_sigmas
            );
        }
    }

    let half_ln = |sign: f64| -> Vec<Vec<f64>> {
        (0..m)
            .map(|k| {
                grid.axis(k)
                    .nodes()
                    .into_iter()
                    .map(|x| (sign * 0.5 * ln_gamma_density(t[k], x)).exp())
                    .collect()
            })
            .collect()
    };
    let up = outer(&half_ln(1.0));
    let mut f: Vec<Complex64> = phi.values().iter().zip(&up).map(|(v, w)| v * *w).collect();

    let leaked = leakage(&grid, &f, &shifts);
    if leaked > policy.max_leakage {
        bail!(
            Accuracy,
            "translation moves a fraction {leaked:.3e} of the state off the grid"
        );
    }

    let shape = grid.shape();
    let mut planner = FftPlanner::new();
    for (k, &d) in shifts.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        let axis = grid.axis(k);
        let mut shifter = Shifter::new(&mut planner, axis.points());
        let delta = d / axis.spacing();
        map_lanes(&mut f, &shape, k, |lane| shifter.shift(lane, delta));
    }

    let phases: Vec<Vec<Complex64>> = (0..m)
        .map(|k| {
            let down: Vec<f64> = grid
                .axis(k)
                .nodes()
                .into_iter()
                .map(|x| (-0.5 * ln_gamma_density(t[k], x)).exp())
                .collect();
            grid.axis(k)
                .nodes()
                .into_iter()
                .zip(down)
                .map(|(x, w)| Complex64::from_polar(w, -x * g.eta[k]))
                .collect()
        })
        .collect();
    let global = Complex64::from_polar(1.0, g.center + 0.5 * a_pairing(t, &g.xi, &g.eta));
    let mut values = f;
    let mut idx = vec![0usize; m];
    for v in values.iter_mut() {
        let mut w = global;
        for k in 0..m {
            w *= phases[k][idx[k]];
        }
        *v *= w;
        for k in (0..m).rev() {
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    GridFn::new(grid, values, MeasureTag::Gaussian(tags))
}

/// Fraction of `‖f‖²` carried across the grid edge by the translation.
fn leakage(grid: &Grid, f: &[Complex64], shifts: &[f64]) -> f64 {
    let shape = grid.shape();
    let total = compensated_sum(f.iter().map(|v| Complex64::new(v.norm_sqr(), 0.0))).re;
    if total == 0.0 {
        return 0.0;
    }
    let mut lost = 0.0;
    let mut idx = vec![0usize; shape.len()];
    for v in f {
        let out = idx.iter().enumerate().any(|(k, &j)| {
            let axis = grid.axis(k);
            let x = axis.node(j) + shifts[k];
            x < axis.node(0) || x > axis.node(axis.points() - 1)
        });
        if out {
            lost += v.norm_sqr();
        }
        for k in (0..shape.len()).rev() {
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    lost / total
}

/// `f ↦ f ⊗ 1`: extends a Gaussian-tagged state by the vacuum on the next
/// `target_m − m` eigenvalues. New axes use the node count and radius (in
/// standard deviations) of the first existing axis.
pub fn tower_embed(phi: &GridFn, target_m: usize, s: &TraceClassSpectrum) -> Result<GridFn> {
    let m = phi.dims();
    if target_m < m {
        bail!(Argument, "cannot embed a {m}-axis state into {target_m} axes");
    }
    let mut tags = phi.variances()?.to_vec();
    if target_m == m {
        return Ok(phi.clone());
    }
    let t = s.leading(target_m)?;
    let a0 = phi.grid().axis(0);
    let layout = Layout {
        points: a0.points(),
        radius_sigmas: a0.radius() / a0.scale(),
    };
    let mut axes = phi.grid().axes().to_vec();
    for &tk in &t[m..] {
        axes.push(layout.state_axis(tk)?);
        tags.push(tk);
    }
    let grid = Grid::new(axes);
    crate::grid::check_dense(grid.len(), "embedded state")?;
    let extra = grid.len() / phi.grid().len();
    let mut values = Vec::with_capacity(grid.len());
    for v in phi.values() {
        values.extend(std::iter::repeat_n(*v, extra));
    }
    GridFn::new(grid, values, MeasureTag::Gaussian(tags))
}
