//! The verification checks. Each function returns a nonnegative residual that
//! is compared against a tolerance by the caller.

use gausswig::field::{distance, hermite_state, hs_inner, inner_product, rank_one_kernel, symbol_inner};
use gausswig::measure_ft::{direct_pairing, loglog_slope};
use gausswig::wigner::{product_gamma2_inner, route_ratio, vacuum_symbol, wigner_product};
use gausswig::{
    apply_kernel, bounds_check, calibrate, char_quadrature, compose, diagram_residual, ft,
    gamma2_inner, gamma2_pairing, gaussian_char, inverse, op_theta, recover_pairing,
    s_scale, scale_identity_residual, schrodinger_apply, t_forward, t_inverse, to_gamma2,
    tower_embed, trapezoid, u_reweight, wigner_transform, wigner_via_fourier, Complex64,
    ConcreteMeasure, Extend, ExtendKind, GaussianParams, GridFn, HeisenbergElement, Layout,
    ProductState, Reweight, SVariant, ScalingLaw, Symbol, TestFunctional, TraceClassSpectrum,
};
use rand::Rng;

use crate::states::{
    multi_indices, random_complex, random_element, random_kernel, random_smooth_symbol, random_state, random_symbol,
};
use crate::CliError;

type Res = Result<f64, CliError>;

/// Largest Hermite degree in random test states.
pub const STATE_DEGREE: usize = 3;
/// Translation reach of random group elements, in standard deviations per axis.
/// Degree-3 states moved by one σ on an 8σ grid leak well below the shift policy's limit.
pub const GROUP_REACH: f64 = 1.0;

/// `max |∫ γ_t(x) e^{ivx} dx − e^{−tv²/2}|` over the lattice, by quadrature.
pub fn char_function(ts: &[f64], vs: &[f64]) -> Res {
    let mut worst: f64 = 0.0;
    for &t in ts {
        let p = GaussianParams::new(t)?;
        for &v in vs {
            let q = char_quadrature(&p, v, 12.0, 4000)?;
            worst = worst.max((q - Complex64::new(gaussian_char(&p, v), 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Largest violation of `a γ_t(a x) = γ_{t/a²}(x)` on `[−4, 4]`.
pub fn scaling_law(ts: &[f64], scales: &[f64], law: ScalingLaw) -> Res {
    let xs: Vec<f64> = (0..=160).map(|j| -4.0 + j as f64 * 0.05).collect();
    let mut worst: f64 = 0.0;
    for &t in ts {
        for &a in scales {
            worst = worst.max(scale_identity_residual(t, a, &xs, law)?);
        }
    }
    Ok(worst)
}

/// `max_k |∫ v^k ρ_ξ(v) dγ_t − ∫ (v + tξ)^k dγ_t|` for `k ≤ 4`, by quadrature.
pub fn cameron_martin(s: &TraceClassSpectrum, xi: f64) -> Res {
    let t = s.values()[0];
    let shift = t * xi;
    let r = 14.0 * t.sqrt() + shift.abs();
    let gamma = |v: f64| gausswig::gaussian_density(&GaussianParams::new(t).expect("positive"), v);
    let mut worst: f64 = 0.0;
    for k in 0..=4 {
        let lhs = trapezoid(
            |v| {
                let rho = gausswig::cameron_martin_density(s, &[xi], &[v]).expect("one axis");
                v.powi(k) * rho * gamma(v)
            },
            -r,
            r,
            6000,
        );
        let rhs = trapezoid(|v| (v + shift).powi(k) * gamma(v), -r, r, 6000);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Sup distance between `T⁻¹((γ_t ⊗ γ_t)^{1/2})` and `(γ_{t/2} ⊗ γ_{1/8t})^{1/2}`,
/// and sup distance of `T T⁻¹` from the identity on that kernel.
pub fn gaussian_symbol_closed_form(ts: &[f64], layout: &Layout) -> Result<(f64, f64), CliError> {
    let (mut sup, mut round): (f64, f64) = (0.0, 0.0);
    for &t in ts {
        let k = gausswig::weyl::closed_form_gaussian_kernel(t, layout)?;
        let a = t_inverse(&k)?;
        let want = gausswig::weyl::closed_form_gaussian_symbol(t, layout)?;
        sup = sup.max(gausswig::sup_distance(&a, &want)?);
        round = round.max(gausswig::sup_distance(&t_forward(&a)?, &k)?);
    }
    Ok((sup, round))
}

/// Level-one inputs for the diagram: the vacuum symbol and two Hermite Wigner symbols.
pub fn diagram_inputs(s: &TraceClassSpectrum, layout: &Layout) -> Result<Vec<Symbol>, CliError> {
    let grid = layout.state_grid(s, 1)?;
    let h = |n| hermite_state(s, &[n], &grid);
    Ok(vec![
        vacuum_symbol(s, 1, layout)?,
        wigner_transform(&h(1)?, &h(2)?, s)?,
        wigner_transform(&h(3)?, &h(0)?, s)?,
    ])
}

/// Largest residual of each square (top, middle, bottom) over `inputs`, at m = 2.
pub fn diagram(s: &TraceClassSpectrum, layout: &Layout, inputs: &[Symbol], variant: SVariant) -> Result<[f64; 3], CliError> {
    let mut worst = [0.0f64; 3];
    for b in inputs {
        let r = diagram_residual(2, b, s, layout, variant)?;
        for k in 0..3 {
            worst[k] = worst[k].max(r[k]);
        }
    }
    Ok(worst)
}

/// Top-square residual with the printed `S` at `t = (0.5, 0.5)` on the vacuum input.
pub fn printed_top_square(layout: &Layout) -> Res {
    let s = TraceClassSpectrum::new(vec![0.5, 0.5])?;
    let b = vacuum_symbol(&s, 1, layout)?;
    Ok(diagram_residual(2, &b, &s, layout, SVariant::Printed)?[0])
}

/// The maps checked for norm preservation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Unitary {
    T,
    S(SVariant),
    U,
    Pi,
    Tower,
}

/// `max |‖X f‖ − ‖f‖|` over `trials` random unit inputs `f` at `m` axis pairs.
pub fn unitarity<R: Rng>(op: Unitary, rng: &mut R, s: &TraceClassSpectrum, m: usize, layout: &Layout, trials: usize) -> Res {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let out = match op {
            Unitary::T => t_forward(&random_smooth_symbol(rng, &layout.weyl_grid(s, m)?)?)?.norm(),
            Unitary::S(v) => s_scale(&random_symbol(rng, &layout.phase_grid(s, m)?)?, s, v)?.norm(),
            Unitary::U => {
                u_reweight(&random_kernel(rng, &layout.kernel_grid(s, m)?)?, Reweight::LebesgueToGaussian, s)?.norm()
            }
            Unitary::Pi => {
                let phi = random_state(rng, s, &layout.state_grid(s, m)?, STATE_DEGREE)?;
                let g = random_element(rng, s, m, GROUP_REACH)?;
                schrodinger_apply(&g, &phi, s)?.norm()
            }
            Unitary::Tower => {
                let phi = random_state(rng, s, &layout.state_grid(s, m)?, STATE_DEGREE)?;
                tower_embed(&phi, m + 1, s)?.norm()
            }
        };
        worst = worst.max((out - 1.0).abs());
    }
    Ok(worst)
}

/// `max ‖π(g₁)π(g₂)φ − π(g₁g₂)φ‖` over random unit states and elements.
pub fn homomorphism<R: Rng>(rng: &mut R, s: &TraceClassSpectrum, m: usize, layout: &Layout, pairs: usize) -> Res {
    let grid = layout.state_grid(s, m)?;
    let reach = GROUP_REACH / 2.0;
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let phi = random_state(rng, s, &grid, STATE_DEGREE)?;
        let g1 = random_element(rng, s, m, reach)?;
        let g2 = random_element(rng, s, m, reach)?;
        let lhs = schrodinger_apply(&g1, &schrodinger_apply(&g2, &phi, s)?, s)?;
        let rhs = schrodinger_apply(&compose(&g1, &g2, s)?, &phi, s)?;
        worst = worst.max(distance(&lhs, &rhs)?);
    }
    Ok(worst)
}

fn dyadic_element<R: Rng>(rng: &mut R, m: usize) -> Result<HeisenbergElement, CliError> {
    let mut d = || rng.gen_range(-32i32..=32) as f64 / 8.0;
    let xi = (0..m).map(|_| d()).collect();
    let eta = (0..m).map(|_| d()).collect();
    Ok(HeisenbergElement::new(xi, eta, d())?)
}

/// Associativity, identity and inverse residuals over random dyadic elements.
/// They vanish exactly when the eigenvalues are dyadic rationals.
pub fn group_axioms<R: Rng>(rng: &mut R, s: &TraceClassSpectrum, m: usize, trials: usize) -> Res {
    let e = HeisenbergElement::identity(m);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (a, b, c) = (dyadic_element(rng, m)?, dyadic_element(rng, m)?, dyadic_element(rng, m)?);
        let left = compose(&compose(&a, &b, s)?, &c, s)?;
        let right = compose(&a, &compose(&b, &c, s)?, s)?;
        worst = worst
            .max(left.max_abs_diff(&right))
            .max(compose(&a, &e, s)?.max_abs_diff(&a))
            .max(compose(&e, &a, s)?.max_abs_diff(&a))
            .max(compose(&a, &inverse(&a), s)?.max_abs_diff(&e))
            .max(compose(&inverse(&a), &a, s)?.max_abs_diff(&e));
    }
    Ok(worst)
}

/// Whether every eigenvalue is a dyadic rational with a short expansion.
pub fn is_dyadic(s: &TraceClassSpectrum) -> bool {
    s.values().iter().all(|t| (t * 1048576.0).fract() == 0.0)
}

/// Frobenius distance between the Gram matrix of `{Wig(h_α, h_β)}` and the
/// tensor Gram `(h_α|h_α′)·conj((h_β|h_β′))`, `|α|, |β| ≤ max_degree`.
pub fn moyal(s: &TraceClassSpectrum, m: usize, layout: &Layout, max_degree: usize) -> Res {
    let grid = layout.state_grid(s, m)?;
    let states = multi_indices(m, max_degree)
        .iter()
        .map(|a| hermite_state(s, a, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let n = states.len();
    let mut gram_states = vec![Complex64::default(); n * n];
    for i in 0..n {
        for j in 0..n {
            gram_states[i * n + j] = inner_product(&states[i], &states[j])?;
        }
    }
    let mut symbols = Vec::with_capacity(n * n);
    for a in &states {
        for b in &states {
            symbols.push(wigner_transform(a, b, s)?);
        }
    }
    let mut frob = 0.0;
    for (p, wp) in symbols.iter().enumerate() {
        for (q, wq) in symbols.iter().enumerate().skip(p) {
            let (a, b) = (p / n, p % n);
            let (a2, b2) = (q / n, q % n);
            let want = gram_states[a * n + a2] * gram_states[b * n + b2].conj();
            let d = (symbol_inner(wp, wq)? - want).norm_sqr();
            frob += if p == q { d } else { 2.0 * d };
        }
    }
    Ok(f64::sqrt(frob))
}

/// `max ‖Op(Wig(φ, ψ)) − φ ⊗ ψ̄‖_HS / ‖φ ⊗ ψ̄‖_HS` over random pairs.
pub fn reconstruction<R: Rng>(rng: &mut R, s: &TraceClassSpectrum, m: usize, layout: &Layout, pairs: usize) -> Res {
    let grid = layout.state_grid(s, m)?;
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let phi = random_state(rng, s, &grid, STATE_DEGREE)?;
        let psi = random_state(rng, s, &grid, STATE_DEGREE)?;
        let k = op_theta(&wigner_transform(&phi, &psi, s)?, s)?;
        let r = rank_one_kernel(&phi, &psi)?;
        worst = worst.max(distance(&k, &r)? / r.norm());
    }
    Ok(worst)
}

/// Duality and unitarity of the quantizer on random symbols:
/// `|(Op(a)φ|ψ) − ∫ a·Wig(φ, ψ) dΓ₂|` and `|⟨Op a, Op b⟩_HS − ⟨a, b⟩_Γ₂|`.
pub fn quantizer_duality<R: Rng>(rng: &mut R, s: &TraceClassSpectrum, m: usize, layout: &Layout, trials: usize) -> Res {
    let grid = layout.state_grid(s, m)?;
    let phase = layout.phase_grid(s, m)?;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let a = random_smooth_symbol(rng, &phase)?;
        let b = random_smooth_symbol(rng, &phase)?;
        let phi = random_state(rng, s, &grid, STATE_DEGREE)?;
        let psi = random_state(rng, s, &grid, STATE_DEGREE)?;
        let (oa, ob) = (op_theta(&a, s)?, op_theta(&b, s)?);
        let lhs = inner_product(&apply_kernel(&oa, &phi)?, &psi)?;
        let rhs = gamma2_pairing(&to_gamma2(&a, s)?, &to_gamma2(&wigner_transform(&phi, &psi, s)?, s)?)?;
        worst = worst.max((lhs - rhs).norm());
        let hs = hs_inner(&oa, &ob)?;
        let g2 = gamma2_inner(&to_gamma2(&a, s)?, &to_gamma2(&b, s)?)?;
        worst = worst.max((hs - g2).norm());
    }
    Ok(worst)
}

/// Outcome of the route comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteOutcome {
    pub constant: f64,
    /// Largest relative L² discrepancy between the two routes.
    pub discrepancy: f64,
    /// Largest deviation of a per-pair route ratio from the calibration constant.
    pub stability: f64,
}

/// Calibrates on the one-pair vacuum with `calibration_layout`, then compares
/// the Fourier route with the kernel route on Hermite pairs of degree ≤ 3
/// at `m` axis pairs.
pub fn route_equivalence(
    s: &TraceClassSpectrum,
    m: usize,
    calibration_layout: &Layout,
    layout: &Layout,
    pairs: &[(Vec<usize>, Vec<usize>)],
) -> Result<RouteOutcome, CliError> {
    let cal = calibrate(s, calibration_layout)?;
    let grid = layout.state_grid(s, m)?;
    let (mut disc, mut stab): (f64, f64) = (0.0, 0.0);
    for (a, b) in pairs {
        let phi = hermite_state(s, a, &grid)?;
        let psi = hermite_state(s, b, &grid)?;
        let w = wigner_transform(&phi, &psi, s)?;
        let f = wigner_via_fourier(&phi, &psi, s, &cal)?;
        disc = disc.max(distance(&w, &f)? / w.norm());
        if m == 1 {
            stab = stab.max((route_ratio(&phi, &psi, s)? - cal.constant).norm());
        }
    }
    Ok(RouteOutcome {
        constant: cal.constant,
        discrepancy: disc,
        stability: stab,
    })
}

/// Hermite pairs `(α, β)` with `|α|, |β| ≤ max_degree` on `m` axes.
pub fn hermite_pairs(m: usize, max_degree: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let idx = multi_indices(m, max_degree);
    idx.iter().flat_map(|a| idx.iter().map(move |b| (a.clone(), b.clone()))).collect()
}

/// `|‖Wig(Ω, Ω)‖_Γ₂ − 1|` at `level` axis pairs; dense up to two pairs, product form at three.
pub fn gamma2_vacuum(s: &TraceClassSpectrum, level: usize, layout: &Layout) -> Res {
    if level >= 3 {
        let vac = ProductState::vacuum(s, level, layout)?;
        let w = wigner_product(&vac, &vac)?.to_gamma2(s)?;
        return Ok((product_gamma2_inner(&w, &w)?.re.sqrt() - 1.0).abs());
    }
    let vac = GridFn::vacuum(layout.state_grid(s, level)?, s.leading(level)?.to_vec())?;
    let w = to_gamma2(&wigner_transform(&vac, &vac, s)?, s)?;
    Ok((w.norm() - 1.0).abs())
}

/// Preservation of `Γ₂` pairings by the constant extension, from one to two
/// pairs densely and from two to three in product form, together with
/// `‖Wig₂(ιφ, ιψ) − ι Wig₁(φ, ψ)‖_Γ₂`.
pub fn tower_pairing<R: Rng>(rng: &mut R, s: &TraceClassSpectrum, layout: &Layout, trials: usize) -> Res {
    let grid = layout.state_grid(s, 1)?;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (p1, q1) = (random_state(rng, s, &grid, STATE_DEGREE)?, random_state(rng, s, &grid, STATE_DEGREE)?);
        let (p2, q2) = (random_state(rng, s, &grid, STATE_DEGREE)?, random_state(rng, s, &grid, STATE_DEGREE)?);
        let a = to_gamma2(&wigner_transform(&p1, &q1, s)?, s)?;
        let b = to_gamma2(&wigner_transform(&p2, &q2, s)?, s)?;
        let ea = a.extend(ExtendKind::Iota, s, layout)?;
        let eb = b.extend(ExtendKind::Iota, s, layout)?;
        worst = worst.max((gamma2_inner(&ea, &eb)? - gamma2_inner(&a, &b)?).norm());
        if s.len() >= 2 {
            let lifted = wigner_transform(&tower_embed(&p1, 2, s)?, &tower_embed(&q1, 2, s)?, s)?;
            worst = worst.max(distance(&to_gamma2(&lifted, s)?, &ea)?);
        }
    }
    if s.len() >= 3 {
        for _ in 0..trials {
            let mut pick = || -> Result<ProductState, CliError> {
                let alpha: Vec<usize> = (0..2).map(|_| rng.gen_range(0..=STATE_DEGREE)).collect();
                Ok(ProductState::hermite(s, &alpha, layout)?)
            };
            let (p, q, u, v) = (pick()?, pick()?, pick()?, pick()?);
            let a = wigner_product(&p, &q)?.to_gamma2(s)?;
            let b = wigner_product(&u, &v)?.to_gamma2(s)?;
            let base = product_gamma2_inner(&a, &b)?;
            let ext = product_gamma2_inner(&a.extend_constant(s, layout)?, &b.extend_constant(s, layout)?)?;
            worst = worst.max((ext - base).norm());
            let lifted = wigner_product(&p.embed(3, s, layout)?, &q.embed(3, s, layout)?)?.to_gamma2(s)?;
            let ea = a.extend_constant(s, layout)?;
            let d2 = product_gamma2_inner(&lifted, &lifted)? + product_gamma2_inner(&ea, &ea)?
                - product_gamma2_inner(&lifted, &ea)? * 2.0;
            worst = worst.max(d2.re.max(0.0).sqrt());
        }
    }
    Ok(worst)
}

/// Outcome of the randomized inequality trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsOutcome {
    /// `max(0, max (|Fμ(f)| − ⟨μ,1⟩))`.
    pub sup_violation: f64,
    /// `max(0, max (lhs − rhs))`.
    pub continuity_violation: f64,
}

fn random_atomic<R: Rng>(rng: &mut R, d: usize) -> Result<ConcreteMeasure, CliError> {
    let n = rng.gen_range(1..=6);
    let atoms = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect();
    let weights = (0..n).map(|_| Complex64::new(rng.gen_range(0.0..1.0), 0.0)).collect();
    Ok(ConcreteMeasure::atomic(atoms, weights)?)
}

fn random_linear<R: Rng>(rng: &mut R, d: usize) -> Result<TestFunctional, CliError> {
    Ok(TestFunctional::linear((0..d).map(|_| rng.gen_range(-2.0..2.0)).collect())?)
}

/// Randomized trials of both inequalities at `d = 2`: atomic measures against
/// linear functionals, plus Gaussian measures every tenth trial.
pub fn bounds_trials<R: Rng>(rng: &mut R, trials: usize) -> Result<BoundsOutcome, CliError> {
    let (mut sup, mut cont): (f64, f64) = (0.0, 0.0);
    for i in 0..trials {
        let mu = if i % 10 == 9 {
            let cov = (0..2).map(|_| rng.gen_range(0.1..2.0)).collect();
            ConcreteMeasure::gaussian(vec![0.0; 2], cov)?
        } else {
            random_atomic(rng, 2)?
        };
        let (f, h) = (random_linear(rng, 2)?, random_linear(rng, 2)?);
        let r = bounds_check(&mu, &f, &h)?;
        sup = sup.max(r.sup_slack);
        cont = cont.max(r.lhs - r.rhs);
    }
    Ok(BoundsOutcome {
        sup_violation: sup.max(0.0),
        continuity_violation: cont.max(0.0),
    })
}

/// Steps at which the recovery error is sampled: three decades.
pub const RECOVERY_STEPS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

/// Recovery errors `|recover_pairing − ⟨μ, f⟩|` at [`RECOVERY_STEPS`] for a
/// signed atomic measure, and their log–log slope.
pub fn recovery_convergence() -> Result<(Vec<f64>, f64), CliError> {
    let mu = ConcreteMeasure::atomic(
        vec![vec![0.8, -0.4], vec![-1.2, 0.5], vec![0.3, 1.1]],
        vec![Complex64::new(0.7, 0.0), Complex64::new(-0.4, 0.0), Complex64::new(1.1, 0.0)],
    )?;
    let f = TestFunctional::linear(vec![1.3, 0.6])?;
    let exact = direct_pairing(&mu, &f)?;
    let errors = RECOVERY_STEPS
        .iter()
        .map(|&st| Ok((recover_pairing(&mu, &f, st)? - exact).norm()))
        .collect::<Result<Vec<_>, CliError>>()?;
    let slope = loglog_slope(&RECOVERY_STEPS, &errors);
    Ok((errors, slope))
}

/// `max |F(αμ + βν)(f) − αFμ(f) − βFν(f)|` over random atomic measures.
pub fn ft_linearity<R: Rng>(rng: &mut R, trials: usize) -> Res {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (mu, nu) = (random_atomic(rng, 2)?, random_atomic(rng, 2)?);
        let (a, b) = (random_complex(rng), random_complex(rng));
        let f = random_linear(rng, 2)?;
        let lhs = ft(&mu.combine(a, &nu, b)?, &f)?;
        let rhs = a * ft(&mu, &f)? + b * ft(&nu, &f)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}
