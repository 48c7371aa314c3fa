//! Uniform symmetric tensor grids and the canonical layouts used for states,
//! kernels and phase-space symbols.
//!
//! Every axis has an even node count `N` and nodes `x_j = (j − N/2)·h`.
//! Multidimensional data is stored row-major with axis 0 slowest.

use std::f64::consts::PI;

use crate::error::{bail, Result};
use crate::gaussian::TraceClassSpectrum;

/// Largest number of samples a dense kernel or symbol may hold.
pub const MAX_DENSE_ELEMENTS: usize = 1 << 24;

/// Relative tolerance for deciding that two grids describe the same nodes.
const SPACING_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    points: usize,
    spacing: f64,
    scale: f64,
}

impl Axis {
    /// `scale` is the natural length of the coordinate (a standard deviation);
    /// it is metadata and does not affect the nodes.
    pub fn new(points: usize, spacing: f64, scale: f64) -> Result<Self> {
        if points < 2 || !points.is_multiple_of(2) {
            bail!(Configuration, "axis needs an even node count ≥ 2, got {points}");
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            bail!(Configuration, "axis spacing must be positive, got {spacing}");
        }
        if !(scale.is_finite() && scale > 0.0) {
            bail!(Configuration, "axis scale must be positive, got {scale}");
        }
        Ok(Self { points, spacing, scale })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - (self.points / 2) as f64) * self.spacing
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.node(j)).collect()
    }

    /// Half-width `N·h/2` of the sampled interval.
    pub fn radius(&self) -> f64 {
        self.points as f64 * self.spacing / 2.0
    }

    pub fn same_nodes(&self, other: &Axis) -> bool {
        self.points == other.points
            && ((self.spacing - other.spacing).abs() <= SPACING_RTOL * self.spacing.abs())
    }

    pub(crate) fn rescaled(&self, factor: f64) -> Axis {
        Axis {
            points: self.points,
            spacing: self.spacing * factor,
            scale: self.scale * factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Self {
        Self { axes }
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &Axis {
        &self.axes[k]
    }

    /// Number of axes.
    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.points).collect()
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn same_nodes(&self, other: &Grid) -> bool {
        self.axes.len() == other.axes.len()
            && self.axes.iter().zip(&other.axes).all(|(a, b)| a.same_nodes(b))
    }

    /// Coordinates of the node with flat index `flat`.
    pub fn point(&self, mut flat: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            out[k] = axis.node(flat % axis.points);
            flat /= axis.points;
        }
        out
    }

    /// Concatenation of the axes of `self` followed by those of `other`.
    pub fn product(&self, other: &Grid) -> Grid {
        Grid::new(self.axes.iter().chain(&other.axes).copied().collect())
    }
}

/// Builds an `m`-axis grid with `points` nodes per axis reaching
/// `radius_sigmas · scales[k]` on axis `k`.
pub fn make_grid(m: usize, points: usize, radius_sigmas: f64, scales: &[f64]) -> Result<Grid> {
    if m == 0 {
        bail!(Configuration, "a grid needs at least one axis");
    }
    if scales.len() != m {
        bail!(Argument, "{} scales given for {m} axes", scales.len());
    }
    if points < 8 || !points.is_power_of_two() {
        bail!(Configuration, "points per axis must be a power of two ≥ 8, got {points}");
    }
    if !(radius_sigmas.is_finite() && radius_sigmas > 0.0) {
        bail!(Configuration, "radius must be positive, got {radius_sigmas}");
    }
    let axes = scales
        .iter()
        .map(|&sigma| Axis::new(points, 2.0 * radius_sigmas * sigma / points as f64, sigma))
        .collect::<Result<Vec<_>>>()?;
    Ok(Grid::new(axes))
}

/// Node count and radius shared by every axis derived from a spectrum.
///
/// From the state axis `(N, h)` of eigenvalue `t` come
/// * the kernel axes: two copies of the state axis,
/// * the Weyl-picture symbol axes: position `(2N, h/2)` and frequency `(N, π/(N h))`,
/// * the phase-space axes (Weyl axes divided by `√t`) on which Wigner symbols live.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layout {
    pub points: usize,
    pub radius_sigmas: f64,
}

impl Default for Layout {
    fn default() -> Self {
        Self {
            points: 64,
            radius_sigmas: 10.0,
        }
    }
}

impl Layout {
    pub fn new(points: usize, radius_sigmas: f64) -> Result<Self> {
        make_grid(1, points, radius_sigmas, &[1.0])?;
        Ok(Self {
            points,
            radius_sigmas,
        })
    }

    pub fn state_axis(&self, t: f64) -> Result<Axis> {
        Ok(*make_grid(1, self.points, self.radius_sigmas, &[t.sqrt()])?.axis(0))
    }

    pub fn weyl_axes(&self, t: f64) -> Result<(Axis, Axis)> {
        Ok(weyl_axes_of(&self.state_axis(t)?))
    }

    pub fn phase_axes(&self, t: f64) -> Result<(Axis, Axis)> {
        let (x, z) = self.weyl_axes(t)?;
        let r = 1.0 / t.sqrt();
        Ok((x.rescaled(r), z.rescaled(r)))
    }

    pub fn state_grid(&self, s: &TraceClassSpectrum, m: usize) -> Result<Grid> {
        let t = s.leading(m)?;
        if m == 0 {
            bail!(Configuration, "a state grid needs at least one axis");
        }
        make_grid(m, self.points, self.radius_sigmas, &s.scales()[..t.len()])
    }

    pub fn kernel_grid(&self, s: &TraceClassSpectrum, m: usize) -> Result<Grid> {
        let g = self.state_grid(s, m)?;
        Ok(g.product(&g))
    }

    pub fn weyl_grid(&self, s: &TraceClassSpectrum, m: usize) -> Result<Grid> {
        self.paired(s, m, |t| self.weyl_axes(t))
    }

    pub fn phase_grid(&self, s: &TraceClassSpectrum, m: usize) -> Result<Grid> {
        self.paired(s, m, |t| self.phase_axes(t))
    }

    fn paired(
        &self,
        s: &TraceClassSpectrum,
        m: usize,
        axes: impl Fn(f64) -> Result<(Axis, Axis)>,
    ) -> Result<Grid> {
        if m == 0 {
            bail!(Configuration, "a symbol grid needs at least one axis pair");
        }
        let pairs = s
            .leading(m)?
            .iter()
            .map(|&t| axes(t))
            .collect::<Result<Vec<_>>>()?;
        let (xs, zs): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Ok(Grid::new(xs.into_iter().chain(zs).collect()))
    }
}

/// Symbol axes produced by the kernel→symbol transform from a kernel axis.
pub(crate) fn weyl_axes_of(state: &Axis) -> (Axis, Axis) {
    let n = state.points;
    let h = state.spacing;
    let x = Axis {
        points: 2 * n,
        spacing: h / 2.0,
        scale: state.scale,
    };
    let z = Axis {
        points: n,
        spacing: PI / (n as f64 * h),
        scale: 1.0 / state.scale,
    };
    (x, z)
}

/// The kernel axis a symbol axis pair maps back to, if the pair is compatible.
pub(crate) fn kernel_axis_of(x: &Axis, z: &Axis) -> Result<Axis> {
    let n = z.points;
    if x.points != 2 * n {
        bail!(
            Configuration,
            "symbol position axis has {} nodes, frequency axis {}; need a 2:1 ratio",
            x.points,
            n
        );
    }
    let h = 2.0 * x.spacing;
    let coupling = x.spacing * z.spacing * n as f64;
    if (coupling - PI / 2.0).abs() > 1e-9 {
        bail!(
            Configuration,
            "phase-grid incompatibility: h_x·h_ξ·N_ξ = {coupling}, expected π/2"
        );
    }
    Axis::new(n, h, x.scale)
}

pub(crate) fn check_dense(len: usize, what: &str) -> Result<()> {
    if len > MAX_DENSE_ELEMENTS {
        bail!(
            Capacity,
            "{what} would hold {len} samples, above the dense limit {MAX_DENSE_ELEMENTS}"
        );
    }
    Ok(())
}
