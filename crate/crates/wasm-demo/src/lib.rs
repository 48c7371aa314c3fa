//! Browser bindings for three one-pair operations: the Wigner transform of two
//! Hermite states, their ambiguity function, and the action of `π(exp θ(ξ, η))`
//! on a Hermite state. Each has a plain Rust form and a `wasm_bindgen` wrapper.

use gausswig::wigner::ambiguity_table;
use gausswig::{
    exp_theta, gaussian_density, hermite_state, schrodinger_apply, wigner_transform,
    GaussianParams, Layout, PhasePoint, TraceClassSpectrum,
};
use wasm_bindgen::prelude::*;

/// Largest grid accepted from the page.
pub const MAX_POINTS: usize = 128;

/// A real grid in row-major order; rows run along the second axis.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    rows: usize,
    cols: usize,
    extent: [f64; 4],
    values: Vec<f64>,
}

#[wasm_bindgen]
impl Heatmap {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `[x_min, x_max, y_min, y_max]`.
    pub fn extent(&self) -> Vec<f64> {
        self.extent.to_vec()
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }
}

/// Lebesgue densities `|f|²` with `f = φ γ_t^{1/2}` before and after the action.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    nodes: Vec<f64>,
    before: Vec<f64>,
    after: Vec<f64>,
}

#[wasm_bindgen]
impl Profile {
    pub fn nodes(&self) -> Vec<f64> {
        self.nodes.clone()
    }

    pub fn before(&self) -> Vec<f64> {
        self.before.clone()
    }

    pub fn after(&self) -> Vec<f64> {
        self.after.clone()
    }
}

fn setup(t: f64, points: usize) -> gausswig::Result<(TraceClassSpectrum, Layout)> {
    if points > MAX_POINTS {
        return Err(gausswig::Error::Capacity(format!("at most {MAX_POINTS} points, got {points}")));
    }
    Ok((TraceClassSpectrum::new(vec![t])?, Layout::new(points, 10.0)?))
}

/// Turns a two-axis field into a heatmap, with rows along the second axis.
fn heatmap(grid: &gausswig::Grid, values: impl Fn(usize) -> f64) -> Heatmap {
    let (a, b) = (grid.axis(0), grid.axis(1));
    let (cols, rows) = (a.points(), b.points());
    let mut out = vec![0.0; rows * cols];
    for c in 0..cols {
        for r in 0..rows {
            out[r * cols + c] = values(c * rows + r);
        }
    }
    Heatmap {
        rows,
        cols,
        extent: [a.node(0), a.node(cols - 1), b.node(0), b.node(rows - 1)],
        values: out,
    }
}

/// `Re Wig(h_α, h_β)` on the phase grid, Lebesgue picture.
pub fn wigner_map(alpha: usize, beta: usize, t: f64, points: usize) -> gausswig::Result<Heatmap> {
    let (s, layout) = setup(t, points)?;
    let grid = layout.state_grid(&s, 1)?;
    let w = wigner_transform(&hermite_state(&s, &[alpha], &grid)?, &hermite_state(&s, &[beta], &grid)?, &s)?;
    Ok(heatmap(w.grid(), |k| w.values()[k].re))
}

/// `|(π(exp θ(ξ, η)) h_α | h_β)|` over the ambiguity table.
pub fn ambiguity_map(alpha: usize, beta: usize, t: f64, points: usize) -> gausswig::Result<Heatmap> {
    let (s, layout) = setup(t, points)?;
    let grid = layout.state_grid(&s, 1)?;
    let a = ambiguity_table(&hermite_state(&s, &[alpha], &grid)?, &hermite_state(&s, &[beta], &grid)?, &s)?;
    Ok(heatmap(a.grid(), |k| a.values()[k].norm()))
}

/// Density of `h_α` and of `π(exp θ(ξ, η)) h_α` against Lebesgue measure.
pub fn schrodinger_profile(alpha: usize, xi: f64, eta: f64, t: f64, points: usize) -> gausswig::Result<Profile> {
    let (s, layout) = setup(t, points)?;
    let grid = layout.state_grid(&s, 1)?;
    let phi = hermite_state(&s, &[alpha], &grid)?;
    let moved = schrodinger_apply(&exp_theta(&PhasePoint::new(vec![xi], vec![eta])?), &phi, &s)?;
    let p = GaussianParams::new(t)?;
    let nodes = grid.axis(0).nodes();
    let density = |f: &gausswig::GridFn| {
        nodes.iter().zip(f.values()).map(|(&v, z)| z.norm_sqr() * gaussian_density(&p, v)).collect()
    };
    Ok(Profile {
        before: density(&phi),
        after: density(&moved),
        nodes,
    })
}

fn js<T>(r: gausswig::Result<T>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = wignerMap)]
pub fn wigner_map_js(alpha: usize, beta: usize, t: f64, points: usize) -> Result<Heatmap, JsError> {
    js(wigner_map(alpha, beta, t, points))
}

#[wasm_bindgen(js_name = ambiguityMap)]
pub fn ambiguity_map_js(alpha: usize, beta: usize, t: f64, points: usize) -> Result<Heatmap, JsError> {
    js(ambiguity_map(alpha, beta, t, points))
}

#[wasm_bindgen(js_name = schrodingerProfile)]
pub fn schrodinger_profile_js(alpha: usize, xi: f64, eta: f64, t: f64, points: usize) -> Result<Profile, JsError> {
    js(schrodinger_profile(alpha, xi, eta, t, points))
}
