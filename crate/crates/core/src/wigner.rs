//! Ambiguity functions, the Wigner transform (through the kernel pipeline and
//! through Fourier inversion of the ambiguity table), the quantizer `Op^θ`,
//! and the Gaussian-weighted phase-space geometry `Γ₂`.
//!
//! Wigner symbols live on the phase-space grid of a [`Layout`]: position nodes
//! at spacing `h/(2√t)` and frequency nodes at spacing `π/(N h √t)`, where `h`
//! is the state spacing. In the `Γ₂` picture a symbol is divided by
//! `(γ_{1/2}(x) γ_{1/8t²}(ξ))^{1/2}` per axis pair and paired against that
//! product probability measure.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{bail, Result};
use crate::fft::{map_lanes, resize_lanes, CenteredDft, Direction, Upsampler};
use crate::field::{outer, pairing, GridFn, Kernel, MeasureTag, Symbol};
use crate::gaussian::{ln_gamma_density, TraceClassSpectrum};
use crate::grid::{check_dense, Axis, Grid, Layout};
use crate::heisenberg::{exp_theta, schrodinger_apply, PhasePoint};
use crate::weyl::{
    s_scale, s_unscale, t_forward, t_inverse, u_reweight, Reweight, SVariant,
};

/// Largest number of axis pairs handled densely.
pub const MAX_DENSE_PAIRS: usize = 3;

/// Largest number of axis pairs for the Fourier route (its table has `2m` axes).
pub const MAX_FOURIER_PAIRS: usize = 2;

/// `(π(exp θ(p))φ | ψ)` for every point `p`.
pub fn ambiguity(
    phi: &GridFn,
    psi: &GridFn,
    pts: &[PhasePoint],
    s: &TraceClassSpectrum,
) -> Result<Vec<Complex64>> {
    pts.iter()
        .map(|p| {
            if p.dims() != phi.dims() {
                bail!(Argument, "phase point has {} axes, states have {}", p.dims(), phi.dims());
            }
            let moved = schrodinger_apply(&exp_theta(p), phi, s)?;
            crate::field::inner_product(&moved, psi)
        })
        .collect()
}

fn check_pair(phi: &GridFn, psi: &GridFn, max: usize) -> Result<()> {
    phi.variances()?;
    if !phi.grid().same_nodes(psi.grid()) || !phi.measure().compatible(psi.measure()) {
        bail!(Argument, "states live on different grids or measures");
    }
    if phi.dims() > max {
        bail!(Capacity, "{} axis pairs requested, at most {max} supported", phi.dims());
    }
    Ok(())
}

/// `Wig(φ, ψ) = S⁻¹ T⁻¹ U⁻¹ (φ ⊗ ψ̄)`, Lebesgue-tagged on the phase-space grid.
pub fn wigner_transform(phi: &GridFn, psi: &GridFn, s: &TraceClassSpectrum) -> Result<Symbol> {
    check_pair(phi, psi, MAX_DENSE_PAIRS)?;
    let k = crate::field::rank_one_kernel(phi, psi)?;
    let lebesgue = u_reweight(&k, Reweight::GaussianToLebesgue, s)?;
    s_unscale(&t_inverse(&lebesgue)?, s, SVariant::Corrected)
}

/// `Op^θ(a) = U T S (a)`, a Gaussian-tagged kernel. Accepts Lebesgue or `Γ₂` symbols.
pub fn op_theta(a: &Symbol, s: &TraceClassSpectrum) -> Result<Kernel> {
    if a.dims() > MAX_DENSE_PAIRS {
        bail!(Capacity, "{} axis pairs requested, at most {MAX_DENSE_PAIRS} supported", a.dims());
    }
    let a = match a.measure() {
        MeasureTag::PhaseWeighted { .. } => from_gamma2(a)?,
        _ => a.clone(),
    };
    let k = t_forward(&s_scale(&a, s, SVariant::Corrected)?)?;
    u_reweight(&k, Reweight::LebesgueToGaussian, s)
}

/// Per-axis `½ ln(γ_{1/2}(x) γ_{1/8t²}(ξ))` tables of a phase-space grid.
fn half_log_weights(grid: &Grid, position: &[f64], frequency: &[f64]) -> Vec<Vec<f64>> {
    let m = grid.rank() / 2;
    (0..2 * m)
        .map(|k| {
            let var = if k < m { position[k] } else { frequency[k - m] };
            grid.axis(k)
                .nodes()
                .into_iter()
                .map(|x| 0.5 * ln_gamma_density(var, x))
                .collect()
        })
        .collect()
}

fn gamma2_variances(t: &[f64]) -> (Vec<f64>, Vec<f64>) {
    (vec![0.5; t.len()], t.iter().map(|t| 1.0 / (8.0 * t * t)).collect())
}

/// Exponent beyond which the `Γ₂` density is treated as zero.
const UNDERFLOW_EXPONENT: f64 = 700.0;

/// Divides a Lebesgue symbol by the square root of the `Γ₂` density. Where
/// that density underflows the weighted value is set to zero; those nodes carry
/// no `Γ₂` mass.
pub fn to_gamma2(a: &Symbol, s: &TraceClassSpectrum) -> Result<Symbol> {
    if !a.measure().is_lebesgue() {
        bail!(Argument, "Γ₂ retagging expects a Lebesgue symbol, found {:?}", a.measure());
    }
    let t = s.leading(a.dims())?;
    let (position, frequency) = gamma2_variances(t);
    let logs = half_log_weights(a.grid(), &position, &frequency);
    let lw = outer_sum(&logs);
    let values = a
        .values()
        .iter()
        .zip(&lw)
        .map(|(v, l)| if -l > UNDERFLOW_EXPONENT { Complex64::default() } else { v * (-l).exp() })
        .collect();
    Symbol::new(
        a.grid().clone(),
        values,
        MeasureTag::PhaseWeighted {
            position,
            frequency,
        },
    )
}

/// Inverse of [`to_gamma2`].
pub fn from_gamma2(a: &Symbol) -> Result<Symbol> {
    let (position, frequency) = match a.measure() {
        MeasureTag::PhaseWeighted {
            position,
            frequency,
        } => (position, frequency),
        other => bail!(Argument, "expected a Γ₂ symbol, found {other:?}"),
    };
    let lw = outer_sum(&half_log_weights(a.grid(), position, frequency));
    let values = a.values().iter().zip(&lw).map(|(v, l)| v * l.exp()).collect();
    Symbol::new(a.grid().clone(), values, MeasureTag::Lebesgue)
}

/// Outer sum of per-axis tables in storage order.
fn outer_sum(axes: &[Vec<f64>]) -> Vec<f64> {
    let mut w = vec![0.0];
    for a in axes {
        let mut next = Vec::with_capacity(w.len() * a.len());
        for &p in &w {
            next.extend(a.iter().map(|&q| p + q));
        }
        w = next;
    }
    w
}

fn require_gamma2(a: &Symbol) -> Result<()> {
    if !matches!(a.measure(), MeasureTag::PhaseWeighted { .. }) {
        bail!(Argument, "expected a Γ₂ symbol, found {:?}", a.measure());
    }
    Ok(())
}

/// `∫ a·conj(b) dΓ₂`.
pub fn gamma2_inner(a: &Symbol, b: &Symbol) -> Result<Complex64> {
    require_gamma2(a)?;
    require_gamma2(b)?;
    pairing(a, b, "Γ₂ inner product")
}

/// The bilinear duality `⟨a, b⟩ = ∫ a·b dΓ₂`, under which
/// `(Op^θ(a)φ | ψ) = ⟨a, Wig(φ, ψ)⟩`.
pub fn gamma2_pairing(a: &Symbol, b: &Symbol) -> Result<Complex64> {
    gamma2_inner(a, &b.conj())
}

/// The ambiguity function sampled on the grid dual to the phase-space grid.
///
/// Axes are `[ξ₁..ξ_m, η₁..η_m]`: `N` nodes at spacing `2h/t` for `ξ` (so that
/// `tξ/2` is a whole number of state nodes) and `2N` nodes at spacing
/// `2π/(N h)` for `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityTable {
    grid: Grid,
    values: Vec<Complex64>,
}

impl AmbiguityTable {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// The phase point of flat index `flat`.
    pub fn point(&self, flat: usize) -> PhasePoint {
        let m = self.grid.rank() / 2;
        let p = self.grid.point(flat);
        PhasePoint {
            xi: p[..m].to_vec(),
            eta: p[m..].to_vec(),
        }
    }
}

/// `A(ξ, η) = ∫ e^{−i⟨η, x⟩} f(x − tξ/2) conj(g(x + tξ/2)) dx` with
/// `f = φ γ̃^{1/2}`, `g = ψ γ̃^{1/2}`, which equals `(π(exp θ(ξ, η))φ | ψ)`.
pub fn ambiguity_table(phi: &GridFn, psi: &GridFn, s: &TraceClassSpectrum) -> Result<AmbiguityTable> {
    check_pair(phi, psi, MAX_FOURIER_PAIRS)?;
    let m = phi.dims();
    let t = s.leading(m)?.to_vec();
    let grid = phi.grid();
    let axes = grid.axes().to_vec();
    let table_len: usize = axes.iter().map(|a| 2 * a.points() * a.points()).product();
    check_dense(table_len, "ambiguity table")?;

    let mut planner = FftPlanner::new();
    let lebesgue = |v: &GridFn| -> Vec<Complex64> {
        let half: Vec<Vec<f64>> = (0..m)
            .map(|k| {
                axes[k]
                    .nodes()
                    .into_iter()
                    .map(|x| (0.5 * ln_gamma_density(t[k], x)).exp())
                    .collect()
            })
            .collect();
        v.values().iter().zip(outer(&half)).map(|(a, w)| a * w).collect()
    };
    let upsample = |planner: &mut FftPlanner<f64>, mut v: Vec<Complex64>| -> Vec<Complex64> {
        let mut shape = grid.shape();
        for k in 0..m {
            let n = shape[k];
            let mut up = Upsampler::new(planner, n);
            let (nv, ns) = resize_lanes(&v, &shape, k, 2 * n, |lane, out| up.apply(lane, out));
            v = nv;
            shape = ns;
        }
        v
    };
    let f = upsample(&mut planner, lebesgue(phi));
    let g = upsample(&mut planner, lebesgue(psi));

    let ns: Vec<usize> = axes.iter().map(|a| a.points()).collect();
    let fine: Vec<usize> = ns.iter().map(|n| 2 * n).collect();
    let fine_len: usize = fine.iter().product();
    let xi_len: usize = ns.iter().product();
    let mut values = vec![Complex64::default(); xi_len * fine_len];
    let mut i_idx = vec![0usize; m];
    for block in values.chunks_mut(fine_len) {
        let offs: Vec<i64> = i_idx.iter().zip(&ns).map(|(&i, &n)| 2 * (i as i64 - (n / 2) as i64)).collect();
        let mut j_idx = vec![0usize; m];
        for out in block.iter_mut() {
            let mut fi = 0usize;
            let mut gi = 0usize;
            let mut inside = true;
            for k in 0..m {
                let a = j_idx[k] as i64 - offs[k];
                let b = j_idx[k] as i64 + offs[k];
                let lim = fine[k] as i64;
                if !(0..lim).contains(&a) || !(0..lim).contains(&b) {
                    inside = false;
                    break;
                }
                fi = fi * fine[k] + a as usize;
                gi = gi * fine[k] + b as usize;
            }
            if inside {
                *out = f[fi] * g[gi].conj();
            }
            increment(&mut j_idx, &fine);
        }
        increment(&mut i_idx, &ns);
    }

    let shape: Vec<usize> = ns.iter().chain(&fine).copied().collect();
    let mut scale = 1.0;
    for k in 0..m {
        let dft = CenteredDft::new(&mut planner, fine[k], Direction::Forward);
        map_lanes(&mut values, &shape, m + k, |lane| dft.apply(lane));
        scale *= axes[k].spacing() / 2.0;
    }
    values.iter_mut().for_each(|v| *v *= scale);

    let xi_axes = (0..m)
        .map(|k| Axis::new(ns[k], 2.0 * axes[k].spacing() / t[k], 1.0 / t[k].sqrt()))
        .collect::<Result<Vec<_>>>()?;
    let eta_axes = (0..m)
        .map(|k| {
            Axis::new(
                fine[k],
                2.0 * PI / (ns[k] as f64 * axes[k].spacing()),
                1.0 / t[k].sqrt(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AmbiguityTable {
        grid: Grid::new(xi_axes.into_iter().chain(eta_axes).collect()),
        values,
    })
}

fn increment(idx: &mut [usize], shape: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return;
        }
        idx[k] = 0;
    }
}

/// Inverts the measure Fourier transform of an ambiguity table:
/// `D(X, Ξ) = ∏_k (t_k²/(2π)²) ∫∫ A(ξ, η) e^{i(√t η X + t^{3/2} ξ Ξ)} dξ dη`,
/// pairing group coordinates with phase-space coordinates. `D` is the
/// symbol-as-density: its total integral is `A(0, 0) = (φ|ψ)`.
pub fn fourier_density(phi: &GridFn, psi: &GridFn, s: &TraceClassSpectrum) -> Result<Symbol> {
    let table = ambiguity_table(phi, psi, s)?;
    let m = phi.dims();
    let t = s.leading(m)?;
    let mut values = table.values;
    let shape = table.grid.shape();
    let mut planner = FftPlanner::new();
    let mut scale = 1.0;
    for k in 0..m {
        let (xi, eta) = (table.grid.axis(k), table.grid.axis(m + k));
        let d_eta = CenteredDft::new(&mut planner, eta.points(), Direction::Inverse);
        map_lanes(&mut values, &shape, m + k, |lane| d_eta.apply(lane));
        let d_xi = CenteredDft::new(&mut planner, xi.points(), Direction::Inverse);
        map_lanes(&mut values, &shape, k, |lane| d_xi.apply(lane));
        scale *= xi.spacing() * eta.spacing() * t[k] * t[k] / (4.0 * PI * PI);
    }
    // [Ξ..., X...] → [X..., Ξ...]
    let rows: usize = shape[..m].iter().product();
    let cols: usize = shape[m..].iter().product();
    let mut out = vec![Complex64::default(); values.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = values[r * cols + c] * scale;
        }
    }
    let layout = layout_of(phi)?;
    let grid = layout.phase_grid(s, m)?;
    Symbol::new(grid, out, MeasureTag::Lebesgue)
}

/// The layout a state grid was built from.
fn layout_of(phi: &GridFn) -> Result<Layout> {
    let a = phi.grid().axis(0);
    let layout = Layout {
        points: a.points(),
        radius_sigmas: a.radius() / a.scale(),
    };
    Ok(layout)
}

/// The scalar relating the Fourier-route density to the kernel-route symbol
/// on one axis pair: `D = c₀ √t · Wig`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub constant: f64,
}

impl Calibration {
    /// The value the calibration is expected to reproduce, `(2π)^{-1/2}`.
    pub fn expected() -> f64 {
        1.0 / (2.0 * PI).sqrt()
    }
}

/// `⟨D, Wig⟩ / (‖Wig‖² ∏ √t_k)` for one state pair; equals `c₀^m` when the
/// two routes agree up to a scalar.
pub fn route_ratio(phi: &GridFn, psi: &GridFn, s: &TraceClassSpectrum) -> Result<Complex64> {
    let d = fourier_density(phi, psi, s)?;
    let w = wigner_transform(phi, psi, s)?;
    let sqrt_t: f64 = s.leading(phi.dims())?.iter().map(|t| t.sqrt()).product();
    let num = crate::field::symbol_inner(&d, &w)?;
    let den = w.norm().powi(2) * sqrt_t;
    if den == 0.0 {
        bail!(Precondition, "route ratio is undefined for a vanishing Wigner symbol");
    }
    Ok(num / den)
}

/// One-time calibration on the vacuum pair at one axis pair.
pub fn calibrate(s: &TraceClassSpectrum, layout: &Layout) -> Result<Calibration> {
    let grid = layout.state_grid(s, 1)?;
    let vac = GridFn::vacuum(grid, vec![s.values()[0]])?;
    let r = route_ratio(&vac, &vac, s)?;
    Ok(Calibration { constant: r.re })
}

/// Wigner transform through the ambiguity table, rescaled by the calibration.
pub fn wigner_via_fourier(
    phi: &GridFn,
    psi: &GridFn,
    s: &TraceClassSpectrum,
    cal: &Calibration,
) -> Result<Symbol> {
    let d = fourier_density(phi, psi, s)?;
    let m = phi.dims();
    let sqrt_t: f64 = s.leading(m)?.iter().map(|t| t.sqrt()).product();
    let k = 1.0 / (cal.constant.powi(m as i32) * sqrt_t);
    Ok(d.scaled(Complex64::new(k, 0.0)))
}

/// The vacuum Wigner symbol `(γ_{1/2}(x) γ_{1/8t²}(ξ))^{1/2}` per axis pair on
/// the phase-space grid.
pub fn vacuum_symbol(s: &TraceClassSpectrum, m: usize, layout: &Layout) -> Result<Symbol> {
    let grid = layout.phase_grid(s, m)?;
    let t = s.leading(m)?;
    let (position, frequency) = gamma2_variances(t);
    let lw = outer_sum(&half_log_weights(&grid, &position, &frequency));
    let values = lw.into_iter().map(|l| Complex64::new(l.exp(), 0.0)).collect();
    Symbol::new(grid, values, MeasureTag::Lebesgue)
}

/// Closed-form auto-ambiguity of the vacuum,
/// `(π(exp θ(ξ, η))Ω | Ω) = exp(−Σ_k t_k (ξ_k²/8 + η_k²/2))`.
pub fn vacuum_ambiguity(p: &PhasePoint, s: &TraceClassSpectrum) -> Result<Complex64> {
    let t = s.leading(p.dims())?;
    let e: f64 = t
        .iter()
        .zip(&p.xi)
        .zip(&p.eta)
        .map(|((t, x), y)| -t * x * x / 8.0 - t * y * y / 2.0)
        .sum();
    Ok(Complex64::new(e.exp(), 0.0))
}

/// A state that is a tensor product of one-axis Gaussian-tagged states.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<GridFn>,
}

/// A phase-space symbol that is a tensor product of one-pair symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSymbol {
    factors: Vec<Symbol>,
}

fn single(t: f64) -> Result<TraceClassSpectrum> {
    TraceClassSpectrum::new(vec![t])
}

impl ProductState {
    pub fn new(factors: Vec<GridFn>) -> Result<Self> {
        if factors.is_empty() {
            bail!(Argument, "a product state needs at least one factor");
        }
        for f in &factors {
            if f.dims() != 1 {
                bail!(Argument, "product factors must have one axis");
            }
            f.variances()?;
        }
        Ok(Self { factors })
    }

    /// `h_α = ⊗_k h_{α_k}` on the state axes of `layout`.
    pub fn hermite(s: &TraceClassSpectrum, alpha: &[usize], layout: &Layout) -> Result<Self> {
        let t = s.leading(alpha.len())?;
        let factors = alpha
            .iter()
            .zip(t)
            .map(|(&a, &tk)| {
                let sk = single(tk)?;
                crate::field::hermite_state(&sk, &[a], &Grid::new(vec![layout.state_axis(tk)?]))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn vacuum(s: &TraceClassSpectrum, m: usize, layout: &Layout) -> Result<Self> {
        Self::hermite(s, &vec![0; m], layout)
    }

    pub fn factors(&self) -> &[GridFn] {
        &self.factors
    }

    pub fn dims(&self) -> usize {
        self.factors.len()
    }

    pub fn norm(&self) -> f64 {
        self.factors.iter().map(|f| f.norm()).product()
    }

    /// `f ↦ f ⊗ 1` up to `target_m` factors.
    pub fn embed(&self, target_m: usize, s: &TraceClassSpectrum, layout: &Layout) -> Result<Self> {
        if target_m < self.dims() {
            bail!(Argument, "cannot embed {} factors into {target_m}", self.dims());
        }
        let t = s.leading(target_m)?;
        let mut factors = self.factors.clone();
        for &tk in &t[self.dims()..] {
            factors.push(GridFn::vacuum(Grid::new(vec![layout.state_axis(tk)?]), vec![tk])?);
        }
        Self::new(factors)
    }

    /// The dense tensor product.
    pub fn to_dense(&self) -> Result<GridFn> {
        let grid = Grid::new(self.factors.iter().map(|f| *f.grid().axis(0)).collect());
        check_dense(grid.len(), "dense product state")?;
        let vals: Vec<Vec<Complex64>> = self.factors.iter().map(|f| f.values().to_vec()).collect();
        let mut values = vec![Complex64::new(1.0, 0.0)];
        for v in &vals {
            let mut next = Vec::with_capacity(values.len() * v.len());
            for a in &values {
                next.extend(v.iter().map(|b| a * b));
            }
            values = next;
        }
        let tags = self
            .factors
            .iter()
            .map(|f| f.variances().map(|v| v[0]))
            .collect::<Result<Vec<_>>>()?;
        GridFn::new(grid, values, MeasureTag::Gaussian(tags))
    }
}

/// `Wig(⊗φ_k, ⊗ψ_k) = ⊗ Wig(φ_k, ψ_k)`.
pub fn wigner_product(phi: &ProductState, psi: &ProductState) -> Result<ProductSymbol> {
    if phi.dims() != psi.dims() {
        bail!(Argument, "product states have {} and {} factors", phi.dims(), psi.dims());
    }
    let factors = phi
        .factors
        .iter()
        .zip(&psi.factors)
        .map(|(a, b)| wigner_transform(a, b, &single(a.variances()?[0])?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductSymbol { factors })
}

impl ProductSymbol {
    pub fn new(factors: Vec<Symbol>) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|f| f.dims() != 1) {
            bail!(Argument, "product symbols need one-pair factors");
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[Symbol] {
        &self.factors
    }

    pub fn dims(&self) -> usize {
        self.factors.len()
    }

    pub fn to_gamma2(&self, s: &TraceClassSpectrum) -> Result<Self> {
        let t = s.leading(self.dims())?;
        let factors = self
            .factors
            .iter()
            .zip(t)
            .map(|(f, &tk)| to_gamma2(f, &single(tk)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { factors })
    }

    /// Appends the constant 1 on the next phase-space axes (`Γ₂` picture).
    pub fn extend_constant(&self, s: &TraceClassSpectrum, layout: &Layout) -> Result<Self> {
        let m = self.dims();
        require_gamma2(&self.factors[0])?;
        let tk = s.leading(m + 1)?[m];
        let (x, z) = layout.phase_axes(tk)?;
        let grid = Grid::new(vec![x, z]);
        let (position, frequency) = gamma2_variances(&[tk]);
        let one = Symbol::new(
            grid.clone(),
            vec![Complex64::new(1.0, 0.0); grid.len()],
            MeasureTag::PhaseWeighted {
                position,
                frequency,
            },
        )?;
        let mut factors = self.factors.clone();
        factors.push(one);
        Ok(Self { factors })
    }

    /// The dense tensor product, axes `[x₁..x_m, ξ₁..ξ_m]`.
    pub fn to_dense(&self) -> Result<Symbol> {
        let mut out = self.factors[0].clone();
        for f in &self.factors[1..] {
            out = tensor_any(&out, f)?;
        }
        Ok(out)
    }
}

/// Pair-interleaved tensor product that keeps the measure tags.
fn tensor_any(a: &Symbol, b: &Symbol) -> Result<Symbol> {
    let tag = match (a.measure(), b.measure()) {
        (MeasureTag::Lebesgue, MeasureTag::Lebesgue) => MeasureTag::Lebesgue,
        (
            MeasureTag::PhaseWeighted {
                position: p1,
                frequency: f1,
            },
            MeasureTag::PhaseWeighted {
                position: p2,
                frequency: f2,
            },
        ) => MeasureTag::PhaseWeighted {
            position: p1.iter().chain(p2).copied().collect(),
            frequency: f1.iter().chain(f2).copied().collect(),
        },
        _ => bail!(Argument, "cannot tensor symbols with different kinds of tag"),
    };
    let strip = |x: &Symbol| {
        Symbol::from_parts_unchecked(x.grid().clone(), x.values().to_vec(), MeasureTag::Lebesgue)
    };
    let t = crate::weyl::tensor_symbols(&strip(a), &strip(b))?;
    Symbol::new(t.grid().clone(), t.into_values(), tag)
}

/// `∏_k ∫ a_k·conj(b_k) dΓ₂`.
pub fn product_gamma2_inner(a: &ProductSymbol, b: &ProductSymbol) -> Result<Complex64> {
    if a.dims() != b.dims() {
        bail!(Argument, "product symbols have {} and {} factors", a.dims(), b.dims());
    }
    a.factors
        .iter()
        .zip(&b.factors)
        .try_fold(Complex64::new(1.0, 0.0), |acc, (x, y)| Ok(acc * gamma2_inner(x, y)?))
}
