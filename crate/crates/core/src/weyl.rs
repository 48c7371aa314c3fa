//! The symbol↔kernel unitaries of Weyl calculus with `L²` symbols, the
//! spectral rescaling `S`, the Gaussian reweighting `U`, tensor maps and the
//! one-axis extension isometries.
//!
//! # Discretization of `T`
//!
//! A kernel axis has `N` nodes at spacing `h`. The matching symbol axes are a
//! position axis of `2N` nodes at spacing `h/2` (every midpoint `(x+y)/2` of two
//! kernel nodes is a node) and a frequency axis of `N` nodes at spacing
//! `π/(N h)`. For a position node of parity `c mod 2`, the differences
//! `x − y` available on the kernel grid are spaced by `2h`, and the frequency
//! axis is exactly the DFT-dual of that lattice. The resulting `T⁻¹` is an
//! exact isometry of the sampled spaces and `T` is its adjoint, so
//! `T∘T⁻¹ = id` up to rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{bail, Result};
use crate::fft::{map_planes, CenteredDft, Direction};
use crate::field::{outer, Field, Kernel, MeasureTag, Symbol};
use crate::gaussian::{ln_gamma_density, sqrt_gamma, TraceClassSpectrum};
use crate::grid::{check_dense, kernel_axis_of, weyl_axes_of, Axis, Grid, Layout};

fn inv_sqrt_2pi() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

/// `e^{∓iπ·par·(l − N/2)/N}`, the half-step phase for odd position nodes.
fn parity_phase(par: usize, l: usize, n: usize, sign: f64) -> Complex64 {
    if par == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, sign * PI * (l as f64 - (n / 2) as f64) / n as f64)
    }
}

/// Kernel indices `(p, q)` stored in slot `s` of position node `c`, if any.
#[inline]
fn slot_pair(c: usize, s: usize, n: usize) -> Option<(usize, usize)> {
    let par = (c % 2) as i64;
    let d = 2 * s as i64 - n as i64 + par;
    let (p, q) = ((c as i64 + d) / 2, (c as i64 - d) / 2);
    let n = n as i64;
    (0..n)
        .contains(&p)
        .then_some(())
        .and((0..n).contains(&q).then_some((p as usize, q as usize)))
}

fn require_lebesgue(tag: &MeasureTag, what: &str) -> Result<()> {
    if !tag.is_lebesgue() {
        bail!(Argument, "{what} expects a Lebesgue-tagged operand, found {tag:?}");
    }
    Ok(())
}

/// Kernel axes for each symbol axis pair.
fn kernel_axes(grid: &Grid) -> Result<Vec<Axis>> {
    let m = grid.rank() / 2;
    (0..m)
        .map(|k| kernel_axis_of(grid.axis(k), grid.axis(m + k)))
        .collect()
}

fn plane_inverse(plane: &[Complex64], out: &mut [Complex64], n: usize, h: f64, dft: &CenteredDft) {
    let pref = inv_sqrt_2pi() * 2.0 * h;
    let mut slots = vec![Complex64::default(); n];
    for c in 0..2 * n {
        for (s, v) in slots.iter_mut().enumerate() {
            *v = slot_pair(c, s, n).map_or(Complex64::default(), |(p, q)| plane[p * n + q]);
        }
        dft.apply(&mut slots);
        for (l, v) in slots.iter().enumerate() {
            out[c * n + l] = *v * pref * parity_phase(c % 2, l, n, -1.0);
        }
    }
}

fn plane_forward(plane: &[Complex64], out: &mut [Complex64], n: usize, h: f64, dft: &CenteredDft) {
    let pref = inv_sqrt_2pi() * PI / (n as f64 * h);
    let mut buf = vec![Complex64::default(); n];
    for c in 0..2 * n {
        for (l, v) in buf.iter_mut().enumerate() {
            *v = plane[c * n + l] * parity_phase(c % 2, l, n, 1.0);
        }
        dft.apply(&mut buf);
        for (s, v) in buf.iter().enumerate() {
            if let Some((p, q)) = slot_pair(c, s, n) {
                out[p * n + q] = *v * pref;
            }
        }
    }
}

fn direct_inverse(plane: &[Complex64], out: &mut [Complex64], n: usize, h: f64) {
    let pref = inv_sqrt_2pi() * 2.0 * h;
    let dz = PI / (n as f64 * h);
    for c in 0..2 * n {
        for l in 0..n {
            let zeta = (l as f64 - (n / 2) as f64) * dz;
            let mut acc = Complex64::default();
            for s in 0..n {
                if let Some((p, q)) = slot_pair(c, s, n) {
                    let u = (p as f64 - q as f64) * h;
                    acc += plane[p * n + q] * Complex64::from_polar(1.0, -u * zeta);
                }
            }
            out[c * n + l] = acc * pref;
        }
    }
}

fn direct_forward(plane: &[Complex64], out: &mut [Complex64], n: usize, h: f64) {
    let dz = PI / (n as f64 * h);
    let pref = inv_sqrt_2pi() * dz;
    for p in 0..n {
        for q in 0..n {
            let c = p + q;
            let u = (p as f64 - q as f64) * h;
            let mut acc = Complex64::default();
            for l in 0..n {
                let zeta = (l as f64 - (n / 2) as f64) * dz;
                acc += plane[c * n + l] * Complex64::from_polar(1.0, u * zeta);
            }
            out[p * n + q] = acc * pref;
        }
    }
}

#[derive(Clone, Copy)]
enum Engine {
    Fft,
    Direct,
}

fn inverse_impl(k: &Kernel, engine: Engine) -> Result<Symbol> {
    require_lebesgue(k.measure(), "T⁻¹")?;
    let m = k.dims();
    let grid = k.grid();
    let (xs, zs): (Vec<_>, Vec<_>) = (0..m).map(|j| weyl_axes_of(grid.axis(j))).unzip();
    let out_grid = Grid::new(xs.into_iter().chain(zs).collect());
    check_dense(out_grid.len(), "symbol")?;
    let mut planner = FftPlanner::new();
    let mut values = k.values().to_vec();
    let mut shape = grid.shape();
    for j in 0..m {
        let axis = grid.axis(j);
        let (n, h) = (axis.points(), axis.spacing());
        let dft = CenteredDft::new(&mut planner, n, Direction::Forward);
        let (v, s) = map_planes(&values, &shape, j, m + j, 2 * n, n, |plane, out| match engine {
            Engine::Fft => plane_inverse(plane, out, n, h, &dft),
            Engine::Direct => direct_inverse(plane, out, n, h),
        });
        values = v;
        shape = s;
    }
    Ok(Symbol::from_parts_unchecked(out_grid, values, MeasureTag::Lebesgue))
}

fn forward_impl(a: &Symbol, engine: Engine) -> Result<Kernel> {
    require_lebesgue(a.measure(), "T")?;
    let m = a.dims();
    let axes = kernel_axes(a.grid())?;
    let out_grid = Grid::new(axes.iter().chain(&axes).copied().collect());
    check_dense(out_grid.len(), "kernel")?;
    let mut planner = FftPlanner::new();
    let mut values = a.values().to_vec();
    let mut shape = a.grid().shape();
    for (j, axis) in axes.iter().enumerate() {
        let (n, h) = (axis.points(), axis.spacing());
        let dft = CenteredDft::new(&mut planner, n, Direction::Inverse);
        let (v, s) = map_planes(&values, &shape, j, m + j, n, n, |plane, out| match engine {
            Engine::Fft => plane_forward(plane, out, n, h, &dft),
            Engine::Direct => direct_forward(plane, out, n, h),
        });
        values = v;
        shape = s;
    }
    Ok(Kernel::from_parts_unchecked(out_grid, values, MeasureTag::Lebesgue))
}

/// `T(a)(x, y) = (2π)^{-m/2} ∫ a((x+y)/2, ξ) e^{i⟨x−y, ξ⟩} dξ`.
pub fn t_forward(a: &Symbol) -> Result<Kernel> {
    forward_impl(a, Engine::Fft)
}

/// `T⁻¹(K)(x, ξ) = (2π)^{-m/2} ∫ K(x + v/2, x − v/2) e^{−i⟨v, ξ⟩} dv`.
pub fn t_inverse(k: &Kernel) -> Result<Symbol> {
    inverse_impl(k, Engine::Fft)
}

/// [`t_forward`] by explicit summation, `O(N³)` per axis pair.
pub fn t_forward_direct(a: &Symbol) -> Result<Kernel> {
    forward_impl(a, Engine::Direct)
}

/// [`t_inverse`] by explicit summation, `O(N³)` per axis pair.
pub fn t_inverse_direct(k: &Kernel) -> Result<Symbol> {
    inverse_impl(k, Engine::Direct)
}

/// Which form of the spectral rescaling `S` to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SVariant {
    /// `(S b)(x, ξ) = ∏ t_k^{-1/2} · b(x/√t, ξ/√t)`: unitary and diagram-compatible.
    #[default]
    Corrected,
    /// `(S b)(x, ξ) = ∏ t_k^{-2} · b(x/t, ξ/t)`: kept to document that it is
    /// neither unitary nor compatible with the extension maps.
    Printed,
}

impl std::str::FromStr for SVariant {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(SVariant::Corrected),
            "printed" => Ok(SVariant::Printed),
            other => bail!(Argument, "unknown S variant {other:?} (expected corrected|printed)"),
        }
    }
}

impl SVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            SVariant::Corrected => "corrected",
            SVariant::Printed => "printed",
        }
    }

    /// Argument dilation `λ` and prefactor exponent `p` with `S b = t^{-p} b(·/λ)`.
    fn law(&self, t: f64) -> (f64, f64) {
        match self {
            SVariant::Corrected => (t.sqrt(), 0.5),
            SVariant::Printed => (t, 2.0),
        }
    }
}

/// `S` realized exactly on the grid: the nodes are dilated, the values scaled.
fn rescale(b: &Symbol, s: &TraceClassSpectrum, variant: SVariant, forward: bool) -> Result<Symbol> {
    require_lebesgue(b.measure(), "S")?;
    let m = b.dims();
    let t = s.leading(m)?;
    let mut axes = b.grid().axes().to_vec();
    let mut factor = 1.0;
    for (k, &tk) in t.iter().enumerate() {
        let (lambda, p) = variant.law(tk);
        let (lambda, p) = if forward { (lambda, p) } else { (1.0 / lambda, -p) };
        axes[k] = axes[k].rescaled(lambda);
        axes[m + k] = axes[m + k].rescaled(lambda);
        factor *= tk.powf(-p);
    }
    let values = b.values().iter().map(|v| v * factor).collect();
    Ok(Symbol::from_parts_unchecked(Grid::new(axes), values, MeasureTag::Lebesgue))
}

pub fn s_scale(b: &Symbol, s: &TraceClassSpectrum, variant: SVariant) -> Result<Symbol> {
    rescale(b, s, variant, true)
}

pub fn s_unscale(a: &Symbol, s: &TraceClassSpectrum, variant: SVariant) -> Result<Symbol> {
    rescale(a, s, variant, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reweight {
    LebesgueToGaussian,
    GaussianToLebesgue,
}

/// `U(K)(v, w) = K(v, w) γ̃(v)^{-1/2} γ̃(w)^{-1/2}` and its inverse.
pub fn u_reweight(k: &Kernel, direction: Reweight, s: &TraceClassSpectrum) -> Result<Kernel> {
    let m = k.dims();
    let (variances, sign) = match (direction, k.measure()) {
        (Reweight::LebesgueToGaussian, MeasureTag::Lebesgue) => (s.leading(m)?.to_vec(), -0.5),
        (Reweight::GaussianToLebesgue, MeasureTag::Gaussian(v)) => (v.clone(), 0.5),
        (dir, tag) => bail!(Argument, "{dir:?} cannot start from a kernel tagged {tag:?}"),
    };
    let factors: Vec<Vec<f64>> = (0..2 * m)
        .map(|j| {
            let t = variances[j % m];
            k.grid()
                .axis(j)
                .nodes()
                .into_iter()
                .map(|x| (sign * ln_gamma_density(t, x)).exp())
                .collect()
        })
        .collect();
    let w = outer(&factors);
    let values = k.values().iter().zip(&w).map(|(v, w)| v * *w).collect();
    let tag = match direction {
        Reweight::LebesgueToGaussian => MeasureTag::Gaussian(variances),
        Reweight::GaussianToLebesgue => MeasureTag::Lebesgue,
    };
    Ok(Kernel::from_parts_unchecked(k.grid().clone(), values, tag))
}

/// Interleaves two paired layouts `[x', ξ']`, `[x'', ξ'']` into `[x', x'', ξ', ξ'']`.
fn pair_tensor(
    g1: &Grid,
    v1: &[Complex64],
    g2: &Grid,
    v2: &[Complex64],
) -> Result<(Grid, Vec<Complex64>)> {
    let (m1, m2) = (g1.rank() / 2, g2.rank() / 2);
    if m1 + m2 > 3 {
        bail!(Capacity, "dense tensor products are limited to 3 axis pairs, got {}", m1 + m2);
    }
    let axes: Vec<Axis> = g1.axes()[..m1]
        .iter()
        .chain(&g2.axes()[..m2])
        .chain(&g1.axes()[m1..])
        .chain(&g2.axes()[m2..])
        .copied()
        .collect();
    let grid = Grid::new(axes);
    check_dense(grid.len(), "tensor product")?;
    let size = |g: &Grid, r: std::ops::Range<usize>| -> usize {
        g.axes()[r].iter().map(|a| a.points()).product()
    };
    let (ax, az) = (size(g1, 0..m1), size(g1, m1..2 * m1));
    let (bx, bz) = (size(g2, 0..m2), size(g2, m2..2 * m2));
    let mut values = Vec::with_capacity(grid.len());
    for i in 0..ax {
        for j in 0..bx {
            for k in 0..az {
                let a = v1[i * az + k];
                values.extend(v2[j * bz..(j + 1) * bz].iter().map(|b| a * b));
            }
        }
    }
    Ok((grid, values))
}

/// `W(g₁ ⊗ g₂)((x₁, x₂), (ξ₁, ξ₂)) = g₁(x₁, ξ₁) g₂(x₂, ξ₂)`.
pub fn tensor_symbols(g1: &Symbol, g2: &Symbol) -> Result<Symbol> {
    require_lebesgue(g1.measure(), "W")?;
    require_lebesgue(g2.measure(), "W")?;
    let (grid, values) = pair_tensor(g1.grid(), g1.values(), g2.grid(), g2.values())?;
    Ok(Symbol::from_parts_unchecked(grid, values, MeasureTag::Lebesgue))
}

/// `V(f₁ ⊗ f₂)((x₁, x₂), (y₁, y₂)) = f₁(x₁, y₁) f₂(x₂, y₂)`.
pub fn tensor_kernels(f1: &Kernel, f2: &Kernel) -> Result<Kernel> {
    require_lebesgue(f1.measure(), "V")?;
    require_lebesgue(f2.measure(), "V")?;
    let (grid, values) = pair_tensor(f1.grid(), f1.values(), f2.grid(), f2.values())?;
    Ok(Kernel::from_parts_unchecked(grid, values, MeasureTag::Lebesgue))
}

/// The four one-axis extensions linking level `m − 1` to level `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendKind {
    /// Phase-space symbols: appends `γ_{1/2}(x)^{1/2} γ_{1/8t²}(ξ)^{1/2}`.
    Beta,
    /// Weyl-picture symbols: appends `γ_{t/2}(x)^{1/2} γ_{1/8t}(ξ)^{1/2}`.
    Alpha,
    /// Lebesgue kernels: appends `γ_t(x)^{1/2} γ_t(y)^{1/2}`.
    Eta,
    /// Gaussian kernels or weighted symbols: appends the constant 1.
    Iota,
}

impl ExtendKind {
    /// The one-axis factor as a function of the two new coordinates.
    fn factor(self, t: f64) -> impl Fn(f64, f64) -> f64 {
        move |u, v| match self {
            ExtendKind::Beta => sqrt_gamma(0.5, u) * sqrt_gamma(1.0 / (8.0 * t * t), v),
            ExtendKind::Alpha => sqrt_gamma(t / 2.0, u) * sqrt_gamma(1.0 / (8.0 * t), v),
            ExtendKind::Eta => sqrt_gamma(t, u) * sqrt_gamma(t, v),
            ExtendKind::Iota => 1.0,
        }
    }
}

fn factor_grid(kind: ExtendKind, t: f64, a0: &Axis, a1: &Axis) -> (Grid, Vec<Complex64>) {
    let g = Grid::new(vec![*a0, *a1]);
    let f = kind.factor(t);
    let mut values = Vec::with_capacity(g.len());
    for u in a0.nodes() {
        values.extend(a1.nodes().into_iter().map(|v| Complex64::new(f(u, v), 0.0)));
    }
    (g, values)
}

/// Extension of a symbol or kernel by one axis pair.
pub trait Extend: Sized {
    /// Appends the factor of `kind` on the explicitly given new axes.
    fn extend_on(&self, kind: ExtendKind, s: &TraceClassSpectrum, new: (Axis, Axis)) -> Result<Self>;

    /// Appends the factor on the canonical axes of `layout` for the next eigenvalue.
    fn extend(&self, kind: ExtendKind, s: &TraceClassSpectrum, layout: &Layout) -> Result<Self>;
}

fn next_eigenvalue(s: &TraceClassSpectrum, m: usize) -> Result<f64> {
    match s.values().get(m) {
        Some(&t) => Ok(t),
        None => bail!(
            Argument,
            "cannot extend to {} axes: the spectrum has only {} eigenvalues",
            m + 1,
            s.len()
        ),
    }
}

impl Extend for Symbol {
    fn extend_on(&self, kind: ExtendKind, s: &TraceClassSpectrum, new: (Axis, Axis)) -> Result<Self> {
        let m = self.dims();
        let t = next_eigenvalue(s, m)?;
        let tag = match (kind, self.measure()) {
            (ExtendKind::Alpha | ExtendKind::Beta, MeasureTag::Lebesgue) => MeasureTag::Lebesgue,
            (
                ExtendKind::Iota,
                MeasureTag::PhaseWeighted {
                    position,
                    frequency,
                },
            ) => {
                let mut p = position.clone();
                let mut f = frequency.clone();
                p.push(0.5);
                f.push(1.0 / (8.0 * t * t));
                MeasureTag::PhaseWeighted {
                    position: p,
                    frequency: f,
                }
            }
            (kind, tag) => bail!(Argument, "{kind:?} does not apply to a symbol tagged {tag:?}"),
        };
        let (fg, fv) = factor_grid(kind, t, &new.0, &new.1);
        let (grid, values) = pair_tensor(self.grid(), self.values(), &fg, &fv)?;
        Ok(Symbol::from_parts_unchecked(grid, values, tag))
    }

    fn extend(&self, kind: ExtendKind, s: &TraceClassSpectrum, layout: &Layout) -> Result<Self> {
        let t = next_eigenvalue(s, self.dims())?;
        let axes = match kind {
            ExtendKind::Alpha => layout.weyl_axes(t)?,
            ExtendKind::Beta | ExtendKind::Iota => layout.phase_axes(t)?,
            ExtendKind::Eta => bail!(Argument, "η extends kernels, not symbols"),
        };
        self.extend_on(kind, s, axes)
    }
}

impl Extend for Kernel {
    fn extend_on(&self, kind: ExtendKind, s: &TraceClassSpectrum, new: (Axis, Axis)) -> Result<Self> {
        let m = self.dims();
        let t = next_eigenvalue(s, m)?;
        let tag = match (kind, self.measure()) {
            (ExtendKind::Eta, MeasureTag::Lebesgue) => MeasureTag::Lebesgue,
            (ExtendKind::Iota, MeasureTag::Gaussian(v)) => {
                let mut v = v.clone();
                v.push(t);
                MeasureTag::Gaussian(v)
            }
            (kind, tag) => bail!(Argument, "{kind:?} does not apply to a kernel tagged {tag:?}"),
        };
        if !new.0.same_nodes(&new.1) {
            bail!(Argument, "kernel extensions need identical x and y axes");
        }
        let (fg, fv) = factor_grid(kind, t, &new.0, &new.1);
        let (grid, values) = pair_tensor(self.grid(), self.values(), &fg, &fv)?;
        Ok(Kernel::from_parts_unchecked(grid, values, tag))
    }

    fn extend(&self, kind: ExtendKind, s: &TraceClassSpectrum, layout: &Layout) -> Result<Self> {
        let t = next_eigenvalue(s, self.dims())?;
        let axis = layout.state_axis(t)?;
        self.extend_on(kind, s, (axis, axis))
    }
}

/// Residuals of the three squares linking levels `m − 1` and `m`:
/// `‖S_m β(b) − α S_{m−1}(b)‖`, `‖T_m α(a) − η T_{m−1}(a)‖` with
/// `a = S_{m−1}(b)`, and `‖U_m η(K) − ι U_{m−1}(K)‖` with `K = T_{m−1}(a)`.
///
/// `b` must live on the phase-space grid of `layout`. The lower two squares
/// do not involve `S`; they always use the corrected `a`, because the printed
/// rescaling moves the symbol off the grid `T` is defined on.
pub fn diagram_residual(
    m: usize,
    b: &Symbol,
    s: &TraceClassSpectrum,
    layout: &Layout,
    variant: SVariant,
) -> Result<[f64; 3]> {
    if !(2..=3).contains(&m) {
        bail!(Capacity, "diagram residuals are available for m = 2 or 3, got {m}");
    }
    if b.dims() != m - 1 {
        bail!(Argument, "expected a symbol on {} axis pairs, got {}", m - 1, b.dims());
    }
    let top_lhs = s_scale(&b.extend(ExtendKind::Beta, s, layout)?, s, variant)?;
    let new_axes = (*top_lhs.grid().axis(m - 1), *top_lhs.grid().axis(2 * m - 1));
    let top_rhs = s_scale(b, s, variant)?.extend_on(ExtendKind::Alpha, s, new_axes)?;
    let top = crate::field::distance(&top_lhs, &top_rhs)?;

    let a = s_scale(b, s, SVariant::Corrected)?;
    let mid_lhs = t_forward(&a.extend(ExtendKind::Alpha, s, layout)?)?;
    let k = t_forward(&a)?;
    let mid_rhs = k.extend(ExtendKind::Eta, s, layout)?;
    let middle = crate::field::distance(&mid_lhs, &mid_rhs)?;

    let bot_lhs = u_reweight(&k.extend(ExtendKind::Eta, s, layout)?, Reweight::LebesgueToGaussian, s)?;
    let bot_rhs = u_reweight(&k, Reweight::LebesgueToGaussian, s)?.extend(ExtendKind::Iota, s, layout)?;
    let bottom = crate::field::distance(&bot_lhs, &bot_rhs)?;
    Ok([top, middle, bottom])
}

/// The closed-form symbol `(γ_{t/2} ⊗ γ_{1/8t})^{1/2}` on the Weyl axes of `layout`.
pub fn closed_form_gaussian_symbol(t: f64, layout: &Layout) -> Result<Symbol> {
    let (x, z) = layout.weyl_axes(t)?;
    let (g, v) = factor_grid(ExtendKind::Alpha, t, &x, &z);
    Symbol::new(g, v, MeasureTag::Lebesgue)
}

/// The closed-form kernel `(γ_t ⊗ γ_t)^{1/2}` on the state axis of `layout`.
pub fn closed_form_gaussian_kernel(t: f64, layout: &Layout) -> Result<Kernel> {
    let a = layout.state_axis(t)?;
    let (g, v) = factor_grid(ExtendKind::Eta, t, &a, &a);
    Kernel::new(g, v, MeasureTag::Lebesgue)
}

/// Norm helper so callers need not import [`Field`].
pub fn symbol_norm(a: &Symbol) -> f64 {
    Field::norm(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{distance, sup_distance};

    fn spec(v: &[f64]) -> TraceClassSpectrum {
        TraceClassSpectrum::new(v.to_vec()).unwrap()
    }

    fn pseudo_random_kernel(layout: &Layout, t: f64, seed: u64) -> Kernel {
        let a = layout.state_axis(t).unwrap();
        let g = Grid::new(vec![a, a]);
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n = g.len();
        let values = (0..n).map(|_| Complex64::new(next(), next())).collect();
        Kernel::new(g, values, MeasureTag::Lebesgue).unwrap()
    }

    #[test]
    fn slot_map_is_a_bijection() {
        let n = 8;
        let mut seen = vec![false; n * n];
        for c in 0..2 * n {
            for s in 0..n {
                if let Some((p, q)) = slot_pair(c, s, n) {
                    assert_eq!(p + q, c);
                    assert!(!seen[p * n + q]);
                    seen[p * n + q] = true;
                }
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn inverse_is_isometric_and_forward_undoes_it() {
        let layout = Layout::new(16, 8.0).unwrap();
        let k = pseudo_random_kernel(&layout, 0.5, 7);
        let a = t_inverse(&k).unwrap();
        assert!((a.norm() - k.norm()).abs() < 1e-12 * k.norm());
        let back = t_forward(&a).unwrap();
        assert!(distance(&back, &k).unwrap() < 1e-12 * k.norm());
    }

    #[test]
    fn fft_matches_direct_sums() {
        let layout = Layout::new(16, 8.0).unwrap();
        let k = pseudo_random_kernel(&layout, 2.0, 3);
        let a = t_inverse(&k).unwrap();
        let a2 = t_inverse_direct(&k).unwrap();
        assert!(sup_distance(&a, &a2).unwrap() < 1e-12);
        let b = t_forward(&a).unwrap();
        let b2 = t_forward_direct(&a).unwrap();
        assert!(sup_distance(&b, &b2).unwrap() < 1e-12);
    }

    #[test]
    fn gaussian_symbol_closed_form() {
        let layout = Layout::default();
        for &t in &[0.25, 0.5, 1.0, 2.0] {
            let k = closed_form_gaussian_kernel(t, &layout).unwrap();
            let want = closed_form_gaussian_symbol(t, &layout).unwrap();
            let got = t_inverse(&k).unwrap();
            let e1 = sup_distance(&got, &want).unwrap();
            let back = t_forward(&want).unwrap();
            let e2 = sup_distance(&back, &k).unwrap();
            assert!(e1 < 1e-9 && e2 < 1e-9, "t={t}: {e1} {e2}");
        }
    }

    #[test]
    fn incompatible_symbol_grid_is_rejected() {
        let x = Axis::new(32, 0.25, 1.0).unwrap();
        let z = Axis::new(16, 0.3, 1.0).unwrap();
        let a = Symbol::new(Grid::new(vec![x, z]), vec![Complex64::default(); 512], MeasureTag::Lebesgue)
            .unwrap();
        assert!(matches!(t_forward(&a), Err(crate::Error::Configuration(_))));
    }

    #[test]
    fn s_variants() {
        let layout = Layout::default();
        let s = spec(&[0.5]);
        let (x, z) = layout.phase_axes(0.5).unwrap();
        let g = Grid::new(vec![x, z]);
        let b = Symbol::from_fn(g, MeasureTag::Lebesgue, |p| {
            Complex64::new((-p[0] * p[0] - p[1] * p[1] / 4.0).exp(), p[0] * 0.1)
        })
        .unwrap();
        let c = s_scale(&b, &s, SVariant::Corrected).unwrap();
        assert!((c.norm() - b.norm()).abs() < 1e-12);
        let back = s_unscale(&c, &s, SVariant::Corrected).unwrap();
        assert!(sup_distance(&back, &b).unwrap() < 1e-15);
        let p = s_scale(&b, &s, SVariant::Printed).unwrap();
        assert!((p.norm() / b.norm() - 2.0).abs() < 1e-12);
        let one = spec(&[1.0]);
        assert_eq!(s_scale(&b, &one, SVariant::Printed).unwrap(), b);
        assert!("printd".parse::<SVariant>().is_err());
    }

    #[test]
    fn u_cancels_gaussian_kernel() {
        let layout = Layout::default();
        let s = spec(&[0.5]);
        let k = closed_form_gaussian_kernel(0.5, &layout).unwrap();
        let u = u_reweight(&k, Reweight::LebesgueToGaussian, &s).unwrap();
        assert!(u.values().iter().all(|v| (v - 1.0).norm() < 1e-12));
        assert!(u_reweight(&u, Reweight::LebesgueToGaussian, &s).is_err());
        let back = u_reweight(&u, Reweight::GaussianToLebesgue, &s).unwrap();
        assert!(sup_distance(&back, &k).unwrap() < 1e-15);
    }

    #[test]
    fn extensions_and_diagram() {
        let layout = Layout::new(32, 8.0).unwrap();
        let s = spec(&[1.0, 0.5]);
        let (x, z) = layout.phase_axes(1.0).unwrap();
        let (g, v) = factor_grid(ExtendKind::Beta, 1.0, &x, &z);
        let b = Symbol::new(g, v, MeasureTag::Lebesgue).unwrap();
        let beta = b.extend(ExtendKind::Beta, &s, &layout).unwrap();
        assert!((beta.norm() - b.norm()).abs() < 1e-8);
        let r = diagram_residual(2, &b, &s, &layout, SVariant::Corrected).unwrap();
        assert!(r.iter().all(|&x| x < 1e-8), "{r:?}");
        let s2 = spec(&[0.5, 0.5]);
        let (x, z) = layout.phase_axes(0.5).unwrap();
        let (g, v) = factor_grid(ExtendKind::Beta, 0.5, &x, &z);
        let b = Symbol::new(g, v, MeasureTag::Lebesgue).unwrap();
        let r = diagram_residual(2, &b, &s2, &layout, SVariant::Printed).unwrap();
        assert!(r[0] > 0.1, "{r:?}");
        assert!(diagram_residual(4, &b, &s2, &layout, SVariant::Corrected).is_err());
    }

    #[test]
    fn tensor_layout() {
        let layout = Layout::new(8, 4.0).unwrap();
        let k1 = pseudo_random_kernel(&layout, 1.0, 1);
        let k2 = pseudo_random_kernel(&layout, 0.5, 2);
        let v = tensor_kernels(&k1, &k2).unwrap();
        assert!((v.norm() - k1.norm() * k2.norm()).abs() < 1e-12);
        // V[(x1,x2),(y1,y2)] = k1[x1,y1] k2[x2,y2]
        let (x1, x2, y1, y2) = (3, 5, 1, 7);
        let flat = ((x1 * 8 + x2) * 8 + y1) * 8 + y2;
        assert_eq!(v.values()[flat], k1.values()[x1 * 8 + y1] * k2.values()[x2 * 8 + y2]);
        let lhs = t_forward(&tensor_symbols(&t_inverse(&k1).unwrap(), &t_inverse(&k2).unwrap()).unwrap())
            .unwrap();
        assert!(distance(&lhs, &v).unwrap() < 1e-12);
    }
}
