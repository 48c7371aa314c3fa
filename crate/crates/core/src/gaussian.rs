//! Centered Gaussian densities on ℝ and ℝ^m, their characteristic functions,
//! and Cameron–Martin densities in eigencoordinates of a trace-class variance.
//!
//! Coordinate conventions used throughout the crate: a point of the large
//! space V₋ is written in the orthonormal basis `e_k = t_k⁻¹ v_k`, a group
//! parameter in V₊ in the eigenbasis `v_k`. With these choices
//! `(e_j | v_k)₀ = δ_jk` and `(v_j | v_k)₀ = t_k δ_jk`, so the Gaussian measure
//! with variance operator `diag(t_k)` is the product of the `γ_{t_k}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{bail, Result};

/// Eigenvalues `t₀ ≥ t₁ ≥ … > 0` of the variance operator, truncated to a finite list.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceClassSpectrum {
    values: Vec<f64>,
    declared_tail: f64,
}

impl TraceClassSpectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_tail(values, 0.0)
    }

    /// `declared_tail` is the sum of the omitted eigenvalues. It only acts through
    /// the constant-one extension on the omitted axes and is recorded for reporting.
    pub fn with_tail(values: Vec<f64>, declared_tail: f64) -> Result<Self> {
        if values.is_empty() {
            bail!(Domain, "spectrum must contain at least one eigenvalue");
        }
        if let Some(bad) = values.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            bail!(Domain, "eigenvalue {bad} is not a positive finite real");
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            bail!(Domain, "eigenvalues must be nonincreasing, got {values:?}");
        }
        if !(declared_tail.is_finite() && declared_tail >= 0.0) {
            bail!(Domain, "declared tail {declared_tail} must be a nonnegative real");
        }
        Ok(Self { values, declared_tail })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn declared_tail(&self) -> f64 {
        self.declared_tail
    }

    /// Trace of the truncated operator plus the declared tail.
    pub fn trace(&self) -> f64 {
        self.values.iter().sum::<f64>() + self.declared_tail
    }

    /// Standard deviations `√t_k`, the natural length scale of each V₋ axis.
    pub fn scales(&self) -> Vec<f64> {
        self.values.iter().map(|t| t.sqrt()).collect()
    }

    /// The first `m` eigenvalues.
    pub fn leading(&self, m: usize) -> Result<&[f64]> {
        if m > self.values.len() {
            bail!(
                Argument,
                "truncation {m} exceeds the {} available eigenvalues",
                self.values.len()
            );
        }
        Ok(&self.values[..m])
    }

    /// The spectrum restricted to its first `m` eigenvalues; the rest moves into the tail.
    pub fn truncate(&self, m: usize) -> Result<Self> {
        let head = self.leading(m)?.to_vec();
        let tail = self.values[m..].iter().sum::<f64>() + self.declared_tail;
        Self::with_tail(head, tail)
    }
}

/// A centered one-dimensional Gaussian, parametrized by its variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    variance: f64,
}

impl GaussianParams {
    pub fn new(variance: f64) -> Result<Self> {
        if !(variance.is_finite() && variance > 0.0) {
            bail!(Domain, "variance must be positive, got {variance}");
        }
        Ok(Self { variance })
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }
}

/// `γ_t(x) = (2πt)^(-1/2) exp(-x²/(2t))` without validation of `t`.
#[inline]
pub(crate) fn gamma(t: f64, x: f64) -> f64 {
    (-x * x / (2.0 * t)).exp() / (2.0 * PI * t).sqrt()
}

/// `ln γ_t(x)`, finite even where `γ_t(x)` underflows.
#[inline]
pub(crate) fn ln_gamma_density(t: f64, x: f64) -> f64 {
    -x * x / (2.0 * t) - 0.5 * (2.0 * PI * t).ln()
}

/// `γ_t(x)^{1/2}`, computed in log space.
#[inline]
pub(crate) fn sqrt_gamma(t: f64, x: f64) -> f64 {
    (0.5 * ln_gamma_density(t, x)).exp()
}

pub fn gaussian_density(p: &GaussianParams, x: f64) -> f64 {
    gamma(p.variance, x)
}

/// `∫ γ_t(x) e^{ivx} dx = exp(-t v²/2)`.
pub fn gaussian_char(p: &GaussianParams, v: f64) -> f64 {
    (-p.variance * v * v / 2.0).exp()
}

/// Trapezoid rule for `∫_{-r}^{r} f(x) dx` with `intervals` panels.
pub fn trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, intervals: usize) -> f64 {
    let h = (hi - lo) / intervals as f64;
    let inner: f64 = (1..intervals).map(|j| f(lo + j as f64 * h)).sum();
    h * (inner + 0.5 * (f(lo) + f(hi)))
}

/// `∫ γ_t(x) e^{ivx} dx` by the trapezoid rule on `±radius_sigmas·√t`.
pub fn char_quadrature(
    p: &GaussianParams,
    v: f64,
    radius_sigmas: f64,
    intervals: usize,
) -> Result<Complex64> {
    if !(radius_sigmas > 0.0) || intervals == 0 {
        bail!(Argument, "quadrature needs a positive radius and at least one interval");
    }
    let t = p.variance;
    let r = radius_sigmas * t.sqrt();
    let re = trapezoid(|x| gamma(t, x) * (v * x).cos(), -r, r, intervals);
    let im = trapezoid(|x| gamma(t, x) * (v * x).sin(), -r, r, intervals);
    Ok(Complex64::new(re, im))
}

/// The product measure `γ_{t_1} ⊗ … ⊗ γ_{t_m}` on ℝ^m.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductGaussian {
    spectrum: TraceClassSpectrum,
    dims: usize,
}

impl ProductGaussian {
    pub fn new(spectrum: TraceClassSpectrum, dims: usize) -> Result<Self> {
        if dims == 0 {
            bail!(Argument, "a product Gaussian needs at least one axis");
        }
        spectrum.leading(dims)?;
        Ok(Self { spectrum, dims })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn variances(&self) -> &[f64] {
        &self.spectrum.values()[..self.dims]
    }

    pub fn spectrum(&self) -> &TraceClassSpectrum {
        &self.spectrum
    }
}

pub fn product_density(g: &ProductGaussian, point: &[f64]) -> Result<f64> {
    if point.len() != g.dims {
        bail!(
            Argument,
            "point has {} coordinates, product Gaussian has {}",
            point.len(),
            g.dims
        );
    }
    Ok(g
        .variances()
        .iter()
        .zip(point)
        .map(|(&t, &x)| gamma(t, x))
        .product())
}

/// Radon–Nikodym derivative of the measure translated by the V₊ vector with
/// eigencoordinates `xi`, evaluated at the V₋ point `v`:
/// `exp(Σ v_k ξ_k − ½ Σ t_k ξ_k²)`.
pub fn cameron_martin_density(s: &TraceClassSpectrum, xi: &[f64], v: &[f64]) -> Result<f64> {
    if xi.len() != v.len() {
        bail!(
            Argument,
            "shift has {} coordinates, evaluation point has {}",
            xi.len(),
            v.len()
        );
    }
    let t = s.leading(xi.len())?;
    let exponent: f64 = xi
        .iter()
        .zip(v)
        .zip(t)
        .map(|((&x, &y), &tk)| y * x - 0.5 * tk * x * x)
        .sum();
    Ok(exponent.exp())
}

/// Characteristic functional `exp(i Σ a_k x_k − ½ Σ t_k x_k²)` of the Gaussian
/// measure with mean `mean` and variance `diag(t_k)`.
pub fn char_functional(s: &TraceClassSpectrum, mean: &[f64], x: &[f64]) -> Result<Complex64> {
    if mean.len() != x.len() {
        bail!(
            Argument,
            "mean has {} coordinates, argument has {}",
            mean.len(),
            x.len()
        );
    }
    let t = s.leading(x.len())?;
    let phase: f64 = mean.iter().zip(x).map(|(a, y)| a * y).sum();
    let quad: f64 = t.iter().zip(x).map(|(tk, y)| tk * y * y).sum();
    Ok(Complex64::from_polar((-0.5 * quad).exp(), phase))
}

/// Which form of the Gaussian dilation law to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalingLaw {
    /// `a·γ_t(a x) = γ_{t/a²}(x)`, the law consistent with the variance normalization.
    Corrected,
    /// `a^{1/2}·γ_t(a x) = γ_{t/a}(x)`, kept to document where it fails.
    Printed,
}

/// Largest pointwise violation of the chosen dilation law over `sample_points`.
pub fn scale_identity_residual(
    t: f64,
    a: f64,
    sample_points: &[f64],
    law: ScalingLaw,
) -> Result<f64> {
    GaussianParams::new(t)?;
    if !(a.is_finite() && a > 0.0) {
        bail!(Domain, "dilation factor must be positive, got {a}");
    }
    let residual = |x: f64| match law {
        ScalingLaw::Corrected => (a * gamma(t, a * x) - gamma(t / (a * a), x)).abs(),
        ScalingLaw::Printed => (a.sqrt() * gamma(t, a * x) - gamma(t / a, x)).abs(),
    };
    Ok(sample_points
        .iter()
        .map(|&x| residual(x))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_validation() {
        assert!(TraceClassSpectrum::new(vec![1.0, 0.5, 0.25]).is_ok());
        assert!(matches!(
            TraceClassSpectrum::new(vec![0.5, 1.0]),
            Err(crate::Error::Domain(_))
        ));
        assert!(TraceClassSpectrum::new(vec![1.0, 0.0]).is_err());
        assert!(TraceClassSpectrum::new(vec![]).is_err());
        assert!(TraceClassSpectrum::with_tail(vec![1.0], -1.0).is_err());
        let s = TraceClassSpectrum::new(vec![1.0, 0.5, 0.25]).unwrap();
        let head = s.truncate(1).unwrap();
        assert_eq!(head.values(), &[1.0]);
        assert!((head.declared_tail() - 0.75).abs() < 1e-15);
        assert!((head.trace() - s.trace()).abs() < 1e-15);
    }

    #[test]
    fn density_at_origin() {
        let p = GaussianParams::new(1.0).unwrap();
        assert!((gaussian_density(&p, 0.0) - 0.3989422804014327).abs() < 1e-15);
        assert!(GaussianParams::new(0.0).is_err());
        assert!(GaussianParams::new(-1.0).is_err());
    }

    #[test]
    fn density_matches_high_precision_value() {
        // (4π)^(-1/2) e^(-1) evaluated with 50-digit arithmetic.
        let reference = 0.10377687435514868_f64;
        let p = GaussianParams::new(2.0).unwrap();
        assert!((gaussian_density(&p, 2.0) - reference).abs() < 1e-14);
    }

    #[test]
    fn densities_are_normalized_with_variance_t() {
        for t in [0.1, 0.5, 1.0, 2.0] {
            let r = 8.0 * f64::sqrt(t);
            let mass = trapezoid(|x| gamma(t, x), -r, r, 400);
            let second = trapezoid(|x| x * x * gamma(t, x), -r, r, 400);
            assert!((mass - 1.0).abs() < 1e-8, "t={t} mass={mass}");
            assert!((second - t).abs() < 1e-8, "t={t} second={second}");
        }
    }

    #[test]
    fn characteristic_function_matches_quadrature() {
        let ts = [0.1, 0.5, 1.0, 2.0, 4.0];
        let vs = [0.0, 0.5, 1.0, 2.0, 3.0];
        for &t in &ts {
            let p = GaussianParams::new(t).unwrap();
            for &v in &vs {
                let r = 8.0 * f64::sqrt(t);
                let re = trapezoid(|x| gamma(t, x) * (v * x).cos(), -r, r, 800);
                let im = trapezoid(|x| gamma(t, x) * (v * x).sin(), -r, r, 800);
                let exact = gaussian_char(&p, v);
                assert!((re - exact).abs() < 1e-8 && im.abs() < 1e-8, "t={t} v={v}");
            }
        }
        let p = GaussianParams::new(2.0).unwrap();
        assert!((gaussian_char(&p, 1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(gaussian_char(&GaussianParams::new(1.0).unwrap(), 0.0), 1.0);
    }

    #[test]
    fn product_density_cases() {
        let s = TraceClassSpectrum::new(vec![1.0, 1.0]).unwrap();
        let g = ProductGaussian::new(s, 2).unwrap();
        let v = product_density(&g, &[0.0, 0.0]).unwrap();
        assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(product_density(&g, &[0.0]).is_err());

        let s = TraceClassSpectrum::new(vec![0.7]).unwrap();
        let g1 = ProductGaussian::new(s, 1).unwrap();
        let p = GaussianParams::new(0.7).unwrap();
        for x in [-1.3, 0.0, 2.1] {
            assert_eq!(product_density(&g1, &[x]).unwrap(), gaussian_density(&p, x));
        }

        let s = TraceClassSpectrum::new(vec![1.0, 0.5]).unwrap();
        let g2 = ProductGaussian::new(s, 2).unwrap();
        let n = 200;
        let (r1, r2) = (8.0, 8.0 * 0.5f64.sqrt());
        let (h1, h2) = (2.0 * r1 / n as f64, 2.0 * r2 / n as f64);
        let mut mass = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                let w1 = if i == 0 || i == n { 0.5 } else { 1.0 };
                let w2 = if j == 0 || j == n { 0.5 } else { 1.0 };
                let x = [-r1 + i as f64 * h1, -r2 + j as f64 * h2];
                mass += w1 * w2 * h1 * h2 * product_density(&g2, &x).unwrap();
            }
        }
        assert!((mass - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cameron_martin_zero_shift_and_mass() {
        let s = TraceClassSpectrum::new(vec![0.5]).unwrap();
        for v in [-3.0, 0.0, 1.7] {
            assert_eq!(cameron_martin_density(&s, &[0.0], &[v]).unwrap(), 1.0);
        }
        let r = 8.0 * 0.5f64.sqrt();
        let mass = trapezoid(
            |v| cameron_martin_density(&s, &[1.0], &[v]).unwrap() * gamma(0.5, v),
            -r - 2.0,
            r + 2.0,
            800,
        );
        assert!((mass - 1.0).abs() < 1e-6);
        assert!(cameron_martin_density(&s, &[1.0, 0.0], &[0.0]).is_err());
    }

    #[test]
    fn cameron_martin_translation_covariance() {
        // ∫ f ρ_x dγ = ∫ f(· + x) dγ; the V₋ displacement of the V₊ vector ξ v_k is t_k ξ.
        let t = 0.5;
        let s = TraceClassSpectrum::new(vec![t]).unwrap();
        let xi = 1.0;
        let shift = t * xi;
        let polys: [fn(f64) -> f64; 5] = [
            |_| 1.0,
            |v| v,
            |v| v * v,
            |v| v * v * v - v,
            |v| v.powi(4) - 2.0 * v * v + 0.3,
        ];
        for f in polys {
            let lhs = trapezoid(
                |v| f(v) * cameron_martin_density(&s, &[xi], &[v]).unwrap() * gamma(t, v),
                -12.0,
                12.0,
                2400,
            );
            let rhs = trapezoid(|v| f(v + shift) * gamma(t, v), -12.0, 12.0, 2400);
            assert!((lhs - rhs).abs() < 1e-6, "lhs={lhs} rhs={rhs}");
        }
    }

    #[test]
    fn characteristic_functional_cases() {
        let s = TraceClassSpectrum::new(vec![2.0]).unwrap();
        assert_eq!(
            char_functional(&s, &[0.0], &[0.0]).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let v = char_functional(&s, &[0.0], &[1.0]).unwrap();
        assert!((v - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-15);

        // mean 1, variance 1, argument 2: quadrature of e^{i x y} against N(1, 1).
        let s1 = TraceClassSpectrum::new(vec![1.0]).unwrap();
        let got = char_functional(&s1, &[1.0], &[2.0]).unwrap();
        let re = trapezoid(|y| gamma(1.0, y - 1.0) * (2.0 * y).cos(), -10.0, 12.0, 2000);
        let im = trapezoid(|y| gamma(1.0, y - 1.0) * (2.0 * y).sin(), -10.0, 12.0, 2000);
        assert!((got - Complex64::new(re, im)).norm() < 1e-5);
        let closed = Complex64::new(-2.0, 2.0).exp();
        assert!((got - closed).norm() < 1e-15);
        assert!(char_functional(&s1, &[0.0, 0.0], &[1.0]).is_err());
    }

    #[test]
    fn scaling_laws() {
        let pts: Vec<f64> = (0..=80).map(|j| -4.0 + 0.1 * j as f64).collect();
        assert_eq!(
            scale_identity_residual(1.3, 1.0, &pts, ScalingLaw::Corrected).unwrap(),
            0.0
        );
        for t in [0.25, 0.5, 1.0, 2.0] {
            for a in [0.5, 1.0, 2.0, 3.0] {
                let r = scale_identity_residual(t, a, &pts, ScalingLaw::Corrected).unwrap();
                assert!(r < 1e-13, "t={t} a={a} r={r}");
            }
        }
        // The square-root form agrees at the origin and fails away from it.
        let at0 = scale_identity_residual(1.0, 2.0, &[0.0], ScalingLaw::Printed).unwrap();
        assert!(at0 < 1e-15);
        let at1 = scale_identity_residual(1.0, 2.0, &[1.0], ScalingLaw::Printed).unwrap();
        assert!(at1 > 0.05, "printed residual at x=1 is {at1}");
        assert!(scale_identity_residual(1.0, -2.0, &pts, ScalingLaw::Corrected).is_err());
        assert!(scale_identity_residual(0.0, 2.0, &pts, ScalingLaw::Corrected).is_err());
    }
}
