//! Sampled states, integral kernels and phase-space symbols together with the
//! measure each one is square-integrable against.
//!
//! Quadrature is the rectangle rule on the uniform grid, which coincides with
//! the trapezoid rule for data that has decayed at the grid edge.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{bail, Result};
use crate::gaussian::{gamma, TraceClassSpectrum};
use crate::grid::{check_dense, Grid};

/// Measure attached to sampled data.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureTag {
    Lebesgue,
    /// Product Gaussian with one variance per state axis. On kernels it
    /// applies to both the `x` and the `y` factor.
    Gaussian(Vec<f64>),
    /// Product Gaussian on phase space: one variance per position axis and
    /// one per frequency axis.
    PhaseWeighted {
        position: Vec<f64>,
        frequency: Vec<f64>,
    },
}

impl MeasureTag {
    fn validate(&self) -> Result<()> {
        let check = |v: &[f64]| -> Result<()> {
            if v.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
                bail!(Domain, "measure variances must be positive, got {v:?}");
            }
            Ok(())
        };
        match self {
            MeasureTag::Lebesgue => Ok(()),
            MeasureTag::Gaussian(v) => check(v),
            MeasureTag::PhaseWeighted {
                position,
                frequency,
            } => {
                check(position)?;
                check(frequency)
            }
        }
    }

    /// Same kind and variances equal up to rounding.
    pub fn compatible(&self, other: &MeasureTag) -> bool {
        let close = |a: &[f64], b: &[f64]| {
            a.len() == b.len()
                && a.iter()
                    .zip(b)
                    .all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()))
        };
        match (self, other) {
            (MeasureTag::Lebesgue, MeasureTag::Lebesgue) => true,
            (MeasureTag::Gaussian(a), MeasureTag::Gaussian(b)) => close(a, b),
            (
                MeasureTag::PhaseWeighted {
                    position: p1,
                    frequency: f1,
                },
                MeasureTag::PhaseWeighted {
                    position: p2,
                    frequency: f2,
                },
            ) => close(p1, p2) && close(f1, f2),
            _ => false,
        }
    }

    pub fn is_lebesgue(&self) -> bool {
        matches!(self, MeasureTag::Lebesgue)
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, MeasureTag::Gaussian(_))
    }
}

/// Neumaier-compensated complex accumulator; the result does not depend on
/// anything but the summation order, which is always the storage order.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    sum: Complex64,
    comp: Complex64,
}

fn two_sum(s: &mut f64, c: &mut f64, x: f64) {
    let t = *s + x;
    if s.abs() >= x.abs() {
        *c += (*s - t) + x;
    } else {
        *c += (x - t) + *s;
    }
    *s = t;
}

impl Accumulator {
    #[inline]
    pub fn add(&mut self, x: Complex64) {
        two_sum(&mut self.sum.re, &mut self.comp.re, x.re);
        two_sum(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    pub fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

pub(crate) fn compensated_sum(it: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let mut acc = Accumulator::default();
    for x in it {
        acc.add(x);
    }
    acc.total()
}

/// Outer product of per-axis weights in storage order.
pub(crate) fn outer(axes: &[Vec<f64>]) -> Vec<f64> {
    let mut w = vec![1.0];
    for a in axes {
        let mut next = Vec::with_capacity(w.len() * a.len());
        for &p in &w {
            next.extend(a.iter().map(|&q| p * q));
        }
        w = next;
    }
    w
}

fn density_weights(grid: &Grid, k: usize, variance: Option<f64>) -> Vec<f64> {
    let axis = grid.axis(k);
    let h = axis.spacing();
    match variance {
        None => vec![h; axis.points()],
        Some(t) => axis.nodes().into_iter().map(|x| gamma(t, x) * h).collect(),
    }
}

fn format_float(x: f64) -> String {
    // Debug formatting is the shortest string that parses back to the same f64.
    format!("{x:?}")
}

pub(crate) fn write_grid_csv(
    w: &mut dyn Write,
    grid: &Grid,
    labels: &[String],
    values: &[Complex64],
) -> io::Result<()> {
    writeln!(w, "{},re,im", labels.join(","))?;
    let mut line = String::new();
    for (flat, v) in values.iter().enumerate() {
        line.clear();
        for x in grid.point(flat) {
            line.push_str(&format_float(x));
            line.push(',');
        }
        line.push_str(&format_float(v.re));
        line.push(',');
        line.push_str(&format_float(v.im));
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Behaviour shared by the three sampled containers.
pub trait Field {
    fn grid(&self) -> &Grid;
    fn values(&self) -> &[Complex64];
    fn measure(&self) -> &MeasureTag;
    /// Per-axis quadrature weights (density times spacing).
    fn axis_weights(&self) -> Vec<Vec<f64>>;
    /// CSV column names of the coordinates.
    fn coordinate_labels(&self) -> Vec<String>;

    fn weights(&self) -> Vec<f64> {
        outer(&self.axis_weights())
    }

    fn norm(&self) -> f64 {
        let w = self.weights();
        compensated_sum(
            self.values()
                .iter()
                .zip(&w)
                .map(|(v, w)| Complex64::new(v.norm_sqr() * w, 0.0)),
        )
        .re
        .max(0.0)
        .sqrt()
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        write_grid_csv(w, self.grid(), &self.coordinate_labels(), self.values())
    }
}

fn ensure_same<F: Field>(a: &F, b: &F, what: &str) -> Result<()> {
    if !a.grid().same_nodes(b.grid()) {
        bail!(Argument, "{what}: operands live on different grids");
    }
    if !a.measure().compatible(b.measure()) {
        bail!(
            Argument,
            "{what}: measure tags differ ({:?} vs {:?})",
            a.measure(),
            b.measure()
        );
    }
    Ok(())
}

/// `Σ a·conj(b)·w` under the shared measure.
pub(crate) fn pairing<F: Field>(a: &F, b: &F, what: &str) -> Result<Complex64> {
    ensure_same(a, b, what)?;
    let w = a.weights();
    Ok(compensated_sum(
        a.values()
            .iter()
            .zip(b.values())
            .zip(&w)
            .map(|((x, y), w)| x * y.conj() * *w),
    ))
}

/// Norm of `a − b` under the shared measure.
pub fn distance<F: Field>(a: &F, b: &F) -> Result<f64> {
    ensure_same(a, b, "distance")?;
    let w = a.weights();
    let s = compensated_sum(
        a.values()
            .iter()
            .zip(b.values())
            .zip(&w)
            .map(|((x, y), w)| Complex64::new((x - y).norm_sqr() * w, 0.0)),
    );
    Ok(s.re.max(0.0).sqrt())
}

/// Largest pointwise deviation `|a − b|` over the grid.
pub fn sup_distance<F: Field>(a: &F, b: &F) -> Result<f64> {
    if !a.grid().same_nodes(b.grid()) {
        bail!(Argument, "sup distance: operands live on different grids");
    }
    Ok(a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

fn validate_values(grid: &Grid, values: &[Complex64]) -> Result<()> {
    if values.len() != grid.len() {
        bail!(
            Argument,
            "{} values supplied for a grid of {} nodes",
            values.len(),
            grid.len()
        );
    }
    if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        bail!(Domain, "sampled values must be finite");
    }
    Ok(())
}

macro_rules! sampled_type {
    ($name:ident) => {
        impl $name {
            pub fn grid(&self) -> &Grid {
                &self.grid
            }

            pub fn values(&self) -> &[Complex64] {
                &self.values
            }

            pub fn measure(&self) -> &MeasureTag {
                &self.measure
            }

            pub fn into_values(self) -> Vec<Complex64> {
                self.values
            }

            pub fn norm(&self) -> f64 {
                Field::norm(self)
            }

            pub fn scaled(&self, c: Complex64) -> Self {
                let mut out = self.clone();
                out.values.iter_mut().for_each(|v| *v *= c);
                out
            }

            /// `self + c·other` on a shared grid and measure.
            pub fn axpy(&self, c: Complex64, other: &Self) -> Result<Self> {
                ensure_same(self, other, "axpy")?;
                let mut out = self.clone();
                for (v, w) in out.values.iter_mut().zip(&other.values) {
                    *v += c * w;
                }
                Ok(out)
            }

            pub fn conj(&self) -> Self {
                let mut out = self.clone();
                out.values.iter_mut().for_each(|v| *v = v.conj());
                out
            }

            pub fn max_abs(&self) -> f64 {
                self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }

            pub fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
                Field::write_csv(self, w)
            }

            pub(crate) fn from_parts_unchecked(
                grid: Grid,
                values: Vec<Complex64>,
                measure: MeasureTag,
            ) -> Self {
                debug_assert_eq!(grid.len(), values.len());
                Self {
                    grid,
                    values,
                    measure,
                }
            }

            /// Samples `f` at every node.
            pub fn from_fn(
                grid: Grid,
                measure: MeasureTag,
                f: impl Fn(&[f64]) -> Complex64,
            ) -> Result<Self> {
                check_dense(grid.len(), stringify!($name))?;
                let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
                Self::new(grid, values, measure)
            }
        }
    };
}

/// A sampled function on an `m`-axis grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: Grid,
    values: Vec<Complex64>,
    measure: MeasureTag,
}

impl GridFn {
    pub fn new(grid: Grid, values: Vec<Complex64>, measure: MeasureTag) -> Result<Self> {
        validate_values(&grid, &values)?;
        measure.validate()?;
        match &measure {
            MeasureTag::Lebesgue => {}
            MeasureTag::Gaussian(v) if v.len() == grid.rank() => {}
            other => bail!(
                Argument,
                "state on {} axes cannot carry measure {other:?}",
                grid.rank()
            ),
        }
        Ok(Self {
            grid,
            values,
            measure,
        })
    }

    pub fn dims(&self) -> usize {
        self.grid.rank()
    }

    /// Variances of the Gaussian tag.
    pub fn variances(&self) -> Result<&[f64]> {
        match &self.measure {
            MeasureTag::Gaussian(v) => Ok(v),
            other => bail!(Argument, "expected a Gaussian-tagged state, found {other:?}"),
        }
    }

    /// The vacuum: the constant 1 in Gaussian L².
    pub fn vacuum(grid: Grid, variances: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![Complex64::new(1.0, 0.0); n], MeasureTag::Gaussian(variances))
    }
}

sampled_type!(GridFn);

impl Field for GridFn {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn values(&self) -> &[Complex64] {
        &self.values
    }
    fn measure(&self) -> &MeasureTag {
        &self.measure
    }
    fn axis_weights(&self) -> Vec<Vec<f64>> {
        (0..self.grid.rank())
            .map(|k| {
                let var = match &self.measure {
                    MeasureTag::Gaussian(v) => Some(v[k]),
                    _ => None,
                };
                density_weights(&self.grid, k, var)
            })
            .collect()
    }
    fn coordinate_labels(&self) -> Vec<String> {
        (1..=self.grid.rank()).map(|k| format!("x{k}")).collect()
    }
}

/// A sampled integral kernel `K(x, y)` on `ℝ^m × ℝ^m`; axes `[x₁..x_m, y₁..y_m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    grid: Grid,
    values: Vec<Complex64>,
    measure: MeasureTag,
}

impl Kernel {
    pub fn new(grid: Grid, values: Vec<Complex64>, measure: MeasureTag) -> Result<Self> {
        if !grid.rank().is_multiple_of(2) {
            bail!(Argument, "kernel grids need an even number of axes");
        }
        validate_values(&grid, &values)?;
        measure.validate()?;
        let m = grid.rank() / 2;
        match &measure {
            MeasureTag::Lebesgue => {}
            MeasureTag::Gaussian(v) if v.len() == m => {}
            other => bail!(Argument, "kernel on {m}+{m} axes cannot carry measure {other:?}"),
        }
        for k in 0..m {
            if !grid.axis(k).same_nodes(grid.axis(k + m)) {
                bail!(Argument, "kernel x and y axes {k} differ");
            }
        }
        Ok(Self {
            grid,
            values,
            measure,
        })
    }

    /// Number of state axes `m`.
    pub fn dims(&self) -> usize {
        self.grid.rank() / 2
    }

    /// Grid of one factor.
    pub fn state_grid(&self) -> Grid {
        Grid::new(self.grid.axes()[..self.dims()].to_vec())
    }

    pub fn hs_norm(&self) -> f64 {
        self.norm()
    }
}

sampled_type!(Kernel);

impl Field for Kernel {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn values(&self) -> &[Complex64] {
        &self.values
    }
    fn measure(&self) -> &MeasureTag {
        &self.measure
    }
    fn axis_weights(&self) -> Vec<Vec<f64>> {
        let m = self.dims();
        (0..2 * m)
            .map(|k| {
                let var = match &self.measure {
                    MeasureTag::Gaussian(v) => Some(v[k % m]),
                    _ => None,
                };
                density_weights(&self.grid, k, var)
            })
            .collect()
    }
    fn coordinate_labels(&self) -> Vec<String> {
        let m = self.dims();
        (1..=m)
            .map(|k| format!("x{k}"))
            .chain((1..=m).map(|k| format!("y{k}")))
            .collect()
    }
}

/// A sampled phase-space symbol `a(x, ξ)`; axes `[x₁..x_m, ξ₁..ξ_m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    grid: Grid,
    values: Vec<Complex64>,
    measure: MeasureTag,
}

impl Symbol {
    pub fn new(grid: Grid, values: Vec<Complex64>, measure: MeasureTag) -> Result<Self> {
        if !grid.rank().is_multiple_of(2) {
            bail!(Argument, "symbol grids need an even number of axes");
        }
        validate_values(&grid, &values)?;
        measure.validate()?;
        let m = grid.rank() / 2;
        match &measure {
            MeasureTag::Lebesgue => {}
            MeasureTag::PhaseWeighted {
                position,
                frequency,
            } if position.len() == m && frequency.len() == m => {}
            other => bail!(Argument, "symbol on {m}+{m} axes cannot carry measure {other:?}"),
        }
        Ok(Self {
            grid,
            values,
            measure,
        })
    }

    /// Number of position axes `m`.
    pub fn dims(&self) -> usize {
        self.grid.rank() / 2
    }
}

sampled_type!(Symbol);

impl Field for Symbol {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn values(&self) -> &[Complex64] {
        &self.values
    }
    fn measure(&self) -> &MeasureTag {
        &self.measure
    }
    fn axis_weights(&self) -> Vec<Vec<f64>> {
        let m = self.dims();
        (0..2 * m)
            .map(|k| {
                let var = match &self.measure {
                    MeasureTag::PhaseWeighted {
                        position,
                        frequency,
                    } => Some(if k < m { position[k] } else { frequency[k - m] }),
                    _ => None,
                };
                density_weights(&self.grid, k, var)
            })
            .collect()
    }
    fn coordinate_labels(&self) -> Vec<String> {
        let m = self.dims();
        (1..=m)
            .map(|k| format!("x{k}"))
            .chain((1..=m).map(|k| format!("xi{k}")))
            .collect()
    }
}

/// `∫ f·conj(g)` under the shared measure.
pub fn inner_product(f: &GridFn, g: &GridFn) -> Result<Complex64> {
    pairing(f, g, "inner product")
}

/// Hilbert–Schmidt pairing `∫∫ K₁·conj(K₂)`.
pub fn hs_inner(k1: &Kernel, k2: &Kernel) -> Result<Complex64> {
    pairing(k1, k2, "Hilbert–Schmidt pairing")
}

/// Plain `L²` pairing of two symbols under their shared tag.
pub fn symbol_inner(a: &Symbol, b: &Symbol) -> Result<Complex64> {
    pairing(a, b, "symbol pairing")
}

/// Orthonormal normalized probabilists' Hermite function `He_n(x)/√(n!)`.
pub fn hermite_normalized(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// `∏ He_{α_k}(v_k/√t_k)/√(α_k!)` on `grid`, Gaussian-tagged with the leading
/// eigenvalues of `s`. Missing trailing indices are zero.
pub fn hermite_state(s: &TraceClassSpectrum, alpha: &[usize], grid: &Grid) -> Result<GridFn> {
    let m = grid.rank();
    if alpha.len() > m {
        bail!(
            Argument,
            "multi-index has {} entries for a {m}-axis grid",
            alpha.len()
        );
    }
    let t = s.leading(m)?.to_vec();
    let axes: Vec<Vec<f64>> = (0..m)
        .map(|k| {
            let a = alpha.get(k).copied().unwrap_or(0);
            let sd = t[k].sqrt();
            grid.axis(k)
                .nodes()
                .into_iter()
                .map(|x| hermite_normalized(a, x / sd))
                .collect()
        })
        .collect();
    let values = outer(&axes).into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    GridFn::new(grid.clone(), values, MeasureTag::Gaussian(t))
}

/// `K(v, w) = φ(v)·conj(ψ(w))`, the kernel of `χ ↦ ⟨χ, ψ⟩ φ`.
pub fn rank_one_kernel(phi: &GridFn, psi: &GridFn) -> Result<Kernel> {
    ensure_same(phi, psi, "rank-one kernel")?;
    let grid = phi.grid.product(&phi.grid);
    check_dense(grid.len(), "rank-one kernel")?;
    let mut values = Vec::with_capacity(grid.len());
    for a in &phi.values {
        values.extend(psi.values.iter().map(|b| a * b.conj()));
    }
    Ok(Kernel::from_parts_unchecked(grid, values, phi.measure.clone()))
}

/// `(Kφ)(v) = ∫ K(v, w) φ(w) dμ(w)`.
pub fn apply_kernel(k: &Kernel, phi: &GridFn) -> Result<GridFn> {
    let sg = k.state_grid();
    if !sg.same_nodes(&phi.grid) {
        bail!(Argument, "kernel and state live on different grids");
    }
    if !k.measure.compatible(&phi.measure) {
        bail!(
            Argument,
            "kernel tag {:?} does not match state tag {:?}",
            k.measure,
            phi.measure
        );
    }
    let w = phi.weights();
    let n = phi.values.len();
    let weighted: Vec<Complex64> = phi.values.iter().zip(&w).map(|(v, w)| v * *w).collect();
    let values = (0..n)
        .map(|i| {
            compensated_sum(
                k.values[i * n..(i + 1) * n]
                    .iter()
                    .zip(&weighted)
                    .map(|(a, b)| a * b),
            )
        })
        .collect();
    Ok(GridFn::from_parts_unchecked(sg, values, phi.measure.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, Layout};

    fn spec(v: &[f64]) -> TraceClassSpectrum {
        TraceClassSpectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn vacuum_has_unit_norm() {
        let s = spec(&[1.0]);
        let g = Layout::new(64, 8.0).unwrap().state_grid(&s, 1).unwrap();
        let one = hermite_state(&s, &[0], &g).unwrap();
        assert!((inner_product(&one, &one).unwrap().re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn gaussian_moments_up_to_six() {
        for &t in &[0.25, 0.5, 1.0, 2.0] {
            let s = spec(&[t]);
            let g = Layout::default().state_grid(&s, 1).unwrap();
            let one = GridFn::vacuum(g.clone(), vec![t]).unwrap();
            for (p, want) in [(2, t), (4, 3.0 * t * t), (6, 15.0 * t * t * t)] {
                let f = GridFn::from_fn(g.clone(), one.measure().clone(), |x| {
                    Complex64::new(x[0].powi(p), 0.0)
                })
                .unwrap();
                let got = inner_product(&f, &one).unwrap().re;
                assert!((got - want).abs() < 1e-7 * want.max(1.0), "t={t} p={p}");
            }
        }
    }

    #[test]
    fn hermite_family_is_orthonormal() {
        let s = spec(&[0.5, 0.25]);
        let g = Layout::new(32, 8.0).unwrap().state_grid(&s, 2).unwrap();
        let mut idx = vec![];
        for a in 0..=4usize {
            for b in 0..=(4 - a) {
                idx.push([a, b]);
            }
        }
        let states: Vec<_> = idx.iter().map(|a| hermite_state(&s, a, &g).unwrap()).collect();
        let mut frob = 0.0;
        for (i, f) in states.iter().enumerate() {
            for (j, h) in states.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                frob += (inner_product(f, h).unwrap() - want).norm_sqr();
            }
        }
        assert!(frob.sqrt() < 1e-7, "{}", frob.sqrt());
    }

    #[test]
    fn hermite_two_closed_form() {
        let s = spec(&[1.0]);
        let g = Layout::default().state_grid(&s, 1).unwrap();
        let h2 = hermite_state(&s, &[2], &g).unwrap();
        for (j, v) in h2.values().iter().enumerate() {
            let x = g.axis(0).node(j);
            assert!((v.re - (x * x - 1.0) / 2f64.sqrt()).abs() < 1e-12 * (1.0 + x * x));
        }
        let h1 = hermite_state(&s, &[1], &g).unwrap();
        assert!(inner_product(&h1, &h2).unwrap().norm() < 1e-8);
        let h1 = hermite_state(&spec(&[0.5]), &[1], &Layout::default().state_grid(&spec(&[0.5]), 1).unwrap()).unwrap();
        assert!((h1.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rank_one_identities() {
        let s = spec(&[0.5]);
        let g = Layout::default().state_grid(&s, 1).unwrap();
        let c = |a: f64, b: f64| Complex64::new(a, b);
        let combo = |coef: &[Complex64]| {
            let mut f = hermite_state(&s, &[0], &g).unwrap().scaled(coef[0]);
            for (k, &a) in coef.iter().enumerate().skip(1) {
                f = f.axpy(a, &hermite_state(&s, &[k], &g).unwrap()).unwrap();
            }
            f
        };
        let phi = combo(&[c(0.3, 0.1), c(-0.5, 0.7), c(0.2, 0.0)]);
        let psi = combo(&[c(0.0, 1.0), c(0.4, -0.2), c(0.0, 0.0), c(0.9, 0.3)]);
        let chi = combo(&[c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.5)]);
        let k = rank_one_kernel(&phi, &psi).unwrap();
        assert!((k.hs_norm() - phi.norm() * psi.norm()).abs() < 1e-8);
        let got = apply_kernel(&k, &chi).unwrap();
        let want = phi.scaled(inner_product(&chi, &psi).unwrap());
        assert!(distance(&got, &want).unwrap() < 1e-8);
        let k2 = rank_one_kernel(&chi, &phi).unwrap();
        let lhs = hs_inner(&k, &k2).unwrap();
        let rhs = inner_product(&phi, &chi).unwrap() * inner_product(&psi, &phi).unwrap().conj();
        assert!((lhs - rhs).norm() < 1e-8);
        assert!(hs_inner(&k, &k).unwrap().re >= 0.0);
    }

    #[test]
    fn vacuum_kernel_is_constant() {
        let s = spec(&[1.0]);
        let g = Layout::default().state_grid(&s, 1).unwrap();
        let one = GridFn::vacuum(g, vec![1.0]).unwrap();
        let k = rank_one_kernel(&one, &one).unwrap();
        assert!(k.values().iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        assert!(k.measure().is_gaussian());
    }

    #[test]
    fn mismatches_are_argument_errors() {
        let g = make_grid(1, 32, 8.0, &[1.0]).unwrap();
        let a = GridFn::vacuum(g.clone(), vec![1.0]).unwrap();
        let b = GridFn::vacuum(g.clone(), vec![0.5]).unwrap();
        assert!(matches!(inner_product(&a, &b), Err(crate::Error::Argument(_))));
        let g2 = make_grid(1, 64, 8.0, &[1.0]).unwrap();
        let c = GridFn::vacuum(g2, vec![1.0]).unwrap();
        assert!(matches!(inner_product(&a, &c), Err(crate::Error::Argument(_))));
        assert!(GridFn::new(g.clone(), vec![Complex64::default(); 3], MeasureTag::Lebesgue).is_err());
        assert!(hermite_state(&spec(&[1.0]), &[1, 1], &g).is_err());
    }

    #[test]
    fn csv_layout() {
        let g = make_grid(1, 8, 2.0, &[1.0]).unwrap();
        let f = GridFn::from_fn(g.clone(), MeasureTag::Lebesgue, |x| Complex64::new(x[0], 0.1)).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "x1,re,im");
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[1], "-2.0,-2.0,0.1");
        let parsed: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(parsed, g.axis(0).node(2));
    }

    #[test]
    fn refinement_reduces_quadrature_error() {
        // The rectangle rule on a fixed radius converges spectrally in the spacing.
        let resid = |n: usize| {
            let g = make_grid(1, n, 4.0, &[1.0]).unwrap();
            let f = GridFn::from_fn(g, MeasureTag::Lebesgue, |x| {
                Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0)
            })
            .unwrap();
            (f.norm().powi(2) - std::f64::consts::PI.sqrt()).abs()
        };
        let (r8, r16) = (resid(8), resid(16));
        assert!(r16 < r8 / 10.0, "{r8} {r16}");
    }
}
