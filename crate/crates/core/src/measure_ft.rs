//! Fourier transform of concrete measures against real test functionals,
//! `(Fμ)(f) = ⟨μ, e^{if}⟩`, its boundedness and continuity inequalities, and
//! recovery of `⟨μ, f⟩` from the transform by a central difference.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{bail, Result};
use crate::field::compensated_sum;

/// Nodes per axis for Gaussian quadrature of sampled functionals.
const QUADRATURE_POINTS: usize = 512;
/// Half-width of the quadrature box in standard deviations.
const QUADRATURE_RADIUS: f64 = 12.0;

/// A finite measure from one of the two implemented classes.
#[derive(Debug, Clone, PartialEq)]
pub enum ConcreteMeasure {
    /// `Σ_j w_j δ_{a_j}`.
    Atomic {
        atoms: Vec<Vec<f64>>,
        weights: Vec<Complex64>,
    },
    /// Gaussian probability measure with diagonal covariance.
    Gaussian { mean: Vec<f64>, covariance: Vec<f64> },
}

impl ConcreteMeasure {
    pub fn atomic(atoms: Vec<Vec<f64>>, weights: Vec<Complex64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            bail!(Argument, "{} atoms with {} weights", atoms.len(), weights.len());
        }
        let d = atoms[0].len();
        if d == 0 || atoms.iter().any(|a| a.len() != d || a.iter().any(|x| !x.is_finite())) {
            bail!(Argument, "atoms must be finite points of one positive dimension");
        }
        if weights.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            bail!(Argument, "atomic weights must be finite");
        }
        Ok(Self::Atomic { atoms, weights })
    }

    /// The unit point mass at `a`.
    pub fn dirac(a: Vec<f64>) -> Result<Self> {
        Self::atomic(vec![a], vec![Complex64::new(1.0, 0.0)])
    }

    pub fn gaussian(mean: Vec<f64>, covariance: Vec<f64>) -> Result<Self> {
        if mean.is_empty() || mean.len() != covariance.len() {
            bail!(Argument, "mean of length {} with {} covariance entries", mean.len(), covariance.len());
        }
        if mean.iter().any(|x| !x.is_finite()) {
            bail!(Argument, "Gaussian mean must be finite");
        }
        if covariance.iter().any(|&k| !(k.is_finite() && k > 0.0)) {
            bail!(Domain, "covariance entries must be positive and finite");
        }
        Ok(Self::Gaussian { mean, covariance })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Atomic { atoms, .. } => atoms[0].len(),
            Self::Gaussian { mean, .. } => mean.len(),
        }
    }

    /// `⟨μ, 1⟩`.
    pub fn total_mass(&self) -> Complex64 {
        match self {
            Self::Atomic { weights, .. } => compensated_sum(weights.iter().copied()),
            Self::Gaussian { .. } => Complex64::new(1.0, 0.0),
        }
    }

    /// `⟨|μ|, 1⟩`.
    pub fn total_variation(&self) -> f64 {
        match self {
            Self::Atomic { weights, .. } => {
                compensated_sum(weights.iter().map(|w| Complex64::new(w.norm(), 0.0))).re
            }
            Self::Gaussian { .. } => 1.0,
        }
    }

    /// Whether the measure lies in the positive cone.
    pub fn is_positive(&self) -> bool {
        match self {
            Self::Atomic { weights, .. } => weights.iter().all(|w| w.im == 0.0 && w.re >= 0.0),
            Self::Gaussian { .. } => true,
        }
    }

    /// `αμ + βν` for two atomic measures of the same dimension.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        match (self, other) {
            (
                Self::Atomic { atoms: a1, weights: w1 },
                Self::Atomic { atoms: a2, weights: w2 },
            ) => {
                if self.dim() != other.dim() {
                    bail!(Argument, "dimensions {} and {} differ", self.dim(), other.dim());
                }
                let atoms = a1.iter().chain(a2).cloned().collect();
                let weights = w1.iter().map(|w| alpha * w).chain(w2.iter().map(|w| beta * w)).collect();
                Self::atomic(atoms, weights)
            }
            _ => bail!(Capability, "linear combinations are implemented for atomic measures only"),
        }
    }
}

type SampledFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type Modulus = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real-valued, uniformly continuous test functional.
#[derive(Clone)]
pub enum TestFunctional {
    /// `x ↦ ⟨v, x⟩`.
    Linear(Vec<f64>),
    /// An arbitrary callable with a declared modulus of continuity.
    Sampled {
        dim: usize,
        f: SampledFn,
        modulus: Modulus,
    },
}

impl fmt::Debug for TestFunctional {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear(v) => fm.debug_tuple("Linear").field(v).finish(),
            Self::Sampled { dim, .. } => fm.debug_struct("Sampled").field("dim", dim).finish_non_exhaustive(),
        }
    }
}

impl TestFunctional {
    pub fn linear(v: Vec<f64>) -> Result<Self> {
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            bail!(Argument, "linear functional needs a finite nonempty vector");
        }
        Ok(Self::Linear(v))
    }

    /// Wraps `f` with modulus of continuity `modulus(δ)`.
    pub fn sampled(
        dim: usize,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        modulus: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            bail!(Argument, "sampled functional needs a positive dimension");
        }
        Ok(Self::Sampled {
            dim,
            f: Arc::new(f),
            modulus: Arc::new(modulus),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Linear(v) => v.len(),
            Self::Sampled { dim, .. } => *dim,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Self::Linear(v) => v.iter().zip(x).map(|(a, b)| a * b).sum(),
            Self::Sampled { f, .. } => f(x),
        }
    }

    /// The declared modulus of continuity; linear functionals report `|v|δ`.
    pub fn modulus(&self, delta: f64) -> f64 {
        match self {
            Self::Linear(v) => v.iter().map(|a| a * a).sum::<f64>().sqrt() * delta,
            Self::Sampled { modulus, .. } => modulus(delta),
        }
    }

    /// `c·f`.
    pub fn scale(&self, c: f64) -> Self {
        match self {
            Self::Linear(v) => Self::Linear(v.iter().map(|a| c * a).collect()),
            Self::Sampled { dim, f, modulus } => {
                let (f, m) = (f.clone(), modulus.clone());
                Self::Sampled {
                    dim: *dim,
                    f: Arc::new(move |x| c * f(x)),
                    modulus: Arc::new(move |d| c.abs() * m(d)),
                }
            }
        }
    }

    /// `f − h`.
    pub fn difference(&self, h: &Self) -> Result<Self> {
        if self.dim() != h.dim() {
            bail!(Argument, "functionals of dimension {} and {}", self.dim(), h.dim());
        }
        Ok(match (self, h) {
            (Self::Linear(a), Self::Linear(b)) => {
                Self::Linear(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            _ => {
                let (f, g) = (self.clone(), h.clone());
                let (mf, mg) = (self.clone(), h.clone());
                Self::Sampled {
                    dim: self.dim(),
                    f: Arc::new(move |x| f.eval(x) - g.eval(x)),
                    modulus: Arc::new(move |d| mf.modulus(d) + mg.modulus(d)),
                }
            }
        })
    }
}

/// `(Fμ)(f) = ⟨μ, e^{if}⟩`.
pub fn ft(mu: &ConcreteMeasure, f: &TestFunctional) -> Result<Complex64> {
    if mu.dim() != f.dim() {
        bail!(Argument, "measure of dimension {} with functional of dimension {}", mu.dim(), f.dim());
    }
    match (mu, f) {
        (ConcreteMeasure::Atomic { atoms, weights }, _) => Ok(compensated_sum(
            atoms
                .iter()
                .zip(weights)
                .map(|(a, w)| w * Complex64::from_polar(1.0, f.eval(a))),
        )),
        (ConcreteMeasure::Gaussian { mean, covariance }, TestFunctional::Linear(v)) => {
            let shift: f64 = mean.iter().zip(v).map(|(a, x)| a * x).sum();
            let quad: f64 = covariance.iter().zip(v).map(|(k, x)| k * x * x).sum();
            Ok(Complex64::from_polar((-0.5 * quad).exp(), shift))
        }
        (ConcreteMeasure::Gaussian { mean, covariance }, TestFunctional::Sampled { .. }) => {
            if mean.len() > 2 {
                bail!(Capability, "Gaussian quadrature of sampled functionals is limited to d ≤ 2, got {}", mean.len());
            }
            Ok(gaussian_quadrature(mean, covariance, |x| Complex64::from_polar(1.0, f.eval(x))))
        }
    }
}

/// Trapezoid rule on a box of ±12σ per axis, which is spectrally accurate for
/// smooth integrands against a Gaussian weight.
fn gaussian_quadrature(mean: &[f64], cov: &[f64], g: impl Fn(&[f64]) -> Complex64) -> Complex64 {
    let d = mean.len();
    let n = QUADRATURE_POINTS;
    let axes: Vec<Vec<(f64, f64)>> = (0..d)
        .map(|k| {
            let sd = cov[k].sqrt();
            let h = 2.0 * QUADRATURE_RADIUS * sd / n as f64;
            (0..=n)
                .map(|j| {
                    let z = -QUADRATURE_RADIUS * sd + j as f64 * h;
                    let w = h * (-z * z / (2.0 * cov[k])).exp() / (2.0 * std::f64::consts::PI * cov[k]).sqrt();
                    (mean[k] + z, w)
                })
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; d];
    let mut terms = Vec::new();
    let mut x = vec![0.0; d];
    loop {
        let mut w = 1.0;
        for k in 0..d {
            x[k] = axes[k][idx[k]].0;
            w *= axes[k][idx[k]].1;
        }
        terms.push(g(&x) * w);
        let mut k = d;
        loop {
            if k == 0 {
                return compensated_sum(terms);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] <= n {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Outcome of [`bounds_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRecord {
    /// `|Fμ(f) − Fμ(h)|²`.
    pub lhs: f64,
    /// `2⟨μ,1⟩(⟨μ,1⟩ − Re Fμ(f − h))`.
    pub rhs: f64,
    /// `lhs ≤ rhs + 1e−12`.
    pub holds: bool,
    /// `max(|Fμ(f)|, |Fμ(h)|) − ⟨μ,1⟩`, nonpositive when the sup bound holds.
    pub sup_slack: f64,
    /// `|Fμ(f)|, |Fμ(h)| ≤ ⟨μ,1⟩ + 1e−12`.
    pub sup_holds: bool,
}

/// Slack allowed for rounding in both inequalities.
pub const BOUNDS_SLACK: f64 = 1e-12;

/// Checks `‖Fμ‖∞ ≤ ⟨μ,1⟩` at `f` and `h` and
/// `|Fμ(f) − Fμ(h)|² ≤ 2⟨μ,1⟩(⟨μ,1⟩ − Re Fμ(f − h))` for a positive measure.
pub fn bounds_check(mu: &ConcreteMeasure, f: &TestFunctional, h: &TestFunctional) -> Result<BoundsRecord> {
    if !mu.is_positive() {
        bail!(Precondition, "the bounds hold for positive measures only");
    }
    let mass = mu.total_mass().re;
    let (a, b) = (ft(mu, f)?, ft(mu, h)?);
    let lhs = (a - b).norm_sqr();
    let rhs = 2.0 * mass * (mass - ft(mu, &f.difference(h)?)?.re);
    let sup_slack = a.norm().max(b.norm()) - mass;
    Ok(BoundsRecord {
        lhs,
        rhs,
        holds: lhs <= rhs + BOUNDS_SLACK,
        sup_slack,
        sup_holds: sup_slack <= BOUNDS_SLACK,
    })
}

/// `(Fμ(s f) − Fμ(−s f)) / (2is)`, which tends to `⟨μ, f⟩` as `s → 0`.
pub fn recover_pairing(mu: &ConcreteMeasure, f: &TestFunctional, step: f64) -> Result<Complex64> {
    if !(step.is_finite() && step > 0.0) {
        bail!(Domain, "step must be positive and finite, got {step}");
    }
    let plus = ft(mu, &f.scale(step))?;
    let minus = ft(mu, &f.scale(-step))?;
    Ok((plus - minus) / Complex64::new(0.0, 2.0 * step))
}

/// `⟨μ, f⟩` evaluated directly (atomic measures and Gaussian/linear only).
pub fn direct_pairing(mu: &ConcreteMeasure, f: &TestFunctional) -> Result<Complex64> {
    if mu.dim() != f.dim() {
        bail!(Argument, "measure of dimension {} with functional of dimension {}", mu.dim(), f.dim());
    }
    match (mu, f) {
        (ConcreteMeasure::Atomic { atoms, weights }, _) => {
            Ok(compensated_sum(atoms.iter().zip(weights).map(|(a, w)| w * f.eval(a))))
        }
        (ConcreteMeasure::Gaussian { mean, .. }, TestFunctional::Linear(v)) => {
            Ok(Complex64::new(mean.iter().zip(v).map(|(a, x)| a * x).sum(), 0.0))
        }
        _ => bail!(Capability, "direct pairing of Gaussian measures with sampled functionals is not implemented"),
    }
}

/// Least-squares slope of `ln err` against `ln step`.
pub fn loglog_slope(steps: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = steps.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn dirac_transform() {
        let mu = ConcreteMeasure::dirac(vec![0.3, -1.0]).unwrap();
        let f = TestFunctional::linear(vec![2.0, 0.5]).unwrap();
        let got = ft(&mu, &f).unwrap();
        assert!((got - Complex64::from_polar(1.0, 0.1)).norm() < 1e-15);
        let g = TestFunctional::sampled(2, |x| x[0] * x[0] - x[1], |d| 3.0 * d).unwrap();
        let got = ft(&mu, &g).unwrap();
        assert!((got - Complex64::from_polar(1.0, 1.09)).norm() < 1e-15);
    }

    #[test]
    fn gaussian_closed_form_and_quadrature() {
        let mu = ConcreteMeasure::gaussian(vec![0.5, -0.25], vec![0.8, 0.3]).unwrap();
        let v = vec![1.5, -2.0];
        let closed = ft(&mu, &TestFunctional::linear(v.clone()).unwrap()).unwrap();
        let phase: f64 = 0.75 + 0.5;
        let decay: f64 = -0.5 * (0.8 * 2.25 + 0.3 * 4.0);
        assert!((closed - Complex64::from_polar(decay.exp(), phase)).norm() < 1e-15);
        let sampled = TestFunctional::sampled(2, move |x| 1.5 * x[0] - 2.0 * x[1], |d| 2.5 * d).unwrap();
        let quad = ft(&mu, &sampled).unwrap();
        assert!((quad - closed).norm() < 1e-12, "{}", (quad - closed).norm());
        let mu3 = ConcreteMeasure::gaussian(vec![0.0; 3], vec![1.0; 3]).unwrap();
        let s3 = TestFunctional::sampled(3, |x| x[0], |d| d).unwrap();
        assert!(matches!(ft(&mu3, &s3), Err(crate::Error::Capability(_))));
    }

    #[test]
    fn two_atoms() {
        let (a, b) = (vec![0.2, 1.0], vec![-0.7, 0.4]);
        let mu = ConcreteMeasure::atomic(vec![a.clone(), b.clone()], vec![c(0.5), c(0.5)]).unwrap();
        let f = TestFunctional::linear(vec![1.0, -3.0]).unwrap();
        let want = (Complex64::from_polar(1.0, f.eval(&a)) + Complex64::from_polar(1.0, f.eval(&b))) / 2.0;
        assert!((ft(&mu, &f).unwrap() - want).norm() < 1e-15);
    }

    #[test]
    fn bounds_at_equal_functionals() {
        let mu = ConcreteMeasure::atomic(vec![vec![1.0], vec![2.0]], vec![c(0.3), c(1.2)]).unwrap();
        let f = TestFunctional::linear(vec![0.7]).unwrap();
        let r = bounds_check(&mu, &f, &f).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.rhs.abs() < 1e-15 && r.holds && r.sup_holds);
        let signed = ConcreteMeasure::atomic(vec![vec![1.0]], vec![c(-1.0)]).unwrap();
        assert!(matches!(bounds_check(&signed, &f, &f), Err(crate::Error::Precondition(_))));
    }

    #[test]
    fn gaussian_bounds_closed_form() {
        let k = vec![0.6, 1.4];
        let mu = ConcreteMeasure::gaussian(vec![0.0, 0.0], k.clone()).unwrap();
        let (xf, xh) = (vec![1.0, 0.5], vec![-0.3, 0.9]);
        let r = bounds_check(&mu, &TestFunctional::Linear(xf.clone()), &TestFunctional::Linear(xh.clone())).unwrap();
        let q: f64 = (0..2).map(|i| k[i] * (xf[i] - xh[i]).powi(2)).sum();
        assert!((r.rhs - 2.0 * (1.0 - (-0.5 * q).exp())).abs() < 1e-15);
        assert!(r.holds && r.lhs <= r.rhs);
    }

    #[test]
    fn recovery_converges_quadratically() {
        let a = vec![0.8, -0.4];
        let mu = ConcreteMeasure::dirac(a.clone()).unwrap();
        let f = TestFunctional::linear(vec![1.3, 0.6]).unwrap();
        let fa = f.eval(&a);
        for s in [1e-1, 1e-2, 1e-3] {
            let err = (recover_pairing(&mu, &f, s).unwrap() - fa).norm();
            assert!(err <= s * s * fa.abs().powi(3) / 6.0 + 1e-15);
        }
        let zero = TestFunctional::linear(vec![0.0, 0.0]).unwrap();
        assert_eq!(recover_pairing(&mu, &zero, 1e-2).unwrap(), Complex64::default());
    }
}
