//! FFT plumbing on centered grids: strided lane/plane traversal, centered DFTs,
//! band-limited shifts and 2× upsampling.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    /// Kernel `e^{-i k x}`.
    Forward,
    /// Kernel `e^{+i k x}`, unnormalized.
    Inverse,
}

/// `out_l = Σ_j in_j exp(∓2πi (l − N/2)(j − N/2)/N)` for even `N`.
pub(crate) struct CenteredDft {
    fft: Arc<dyn Fft<f64>>,
    n: usize,
    post: f64,
}

impl CenteredDft {
    pub fn new(planner: &mut FftPlanner<f64>, n: usize, dir: Direction) -> Self {
        let fft = match dir {
            Direction::Forward => planner.plan_fft_forward(n),
            Direction::Inverse => planner.plan_fft_inverse(n),
        };
        // e^{∓iπ N/2} = (−1)^{N/2} for either sign.
        let post = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        Self { fft, n, post }
    }

    pub fn apply(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        for (j, v) in buf.iter_mut().enumerate() {
            if j % 2 == 1 {
                *v = -*v;
            }
        }
        self.fft.process(buf);
        for (l, v) in buf.iter_mut().enumerate() {
            let sign = if l % 2 == 1 { -self.post } else { self.post };
            *v *= sign;
        }
    }
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

/// Base offsets of every lane along the axes in `skip` (all other axes enumerated).
fn base_offsets(shape: &[usize], skip: &[usize]) -> Vec<usize> {
    let st = strides(shape);
    let mut bases = vec![0usize];
    for (k, &n) in shape.iter().enumerate() {
        if skip.contains(&k) {
            continue;
        }
        let mut next = Vec::with_capacity(bases.len() * n);
        for &b in &bases {
            for i in 0..n {
                next.push(b + i * st[k]);
            }
        }
        bases = next;
    }
    bases
}

/// Applies `f` to every 1-D lane along `axis`, in place.
pub(crate) fn map_lanes(
    values: &mut [Complex64],
    shape: &[usize],
    axis: usize,
    mut f: impl FnMut(&mut [Complex64]),
) {
    let st = strides(shape)[axis];
    let n = shape[axis];
    let mut lane = vec![Complex64::default(); n];
    for base in base_offsets(shape, &[axis]) {
        for (i, v) in lane.iter_mut().enumerate() {
            *v = values[base + i * st];
        }
        f(&mut lane);
        for (i, v) in lane.iter().enumerate() {
            values[base + i * st] = *v;
        }
    }
}

/// Maps every lane along `axis` to a lane of a (possibly) different length.
pub(crate) fn resize_lanes(
    values: &[Complex64],
    shape: &[usize],
    axis: usize,
    out_len: usize,
    mut f: impl FnMut(&[Complex64], &mut [Complex64]),
) -> (Vec<Complex64>, Vec<usize>) {
    let mut out_shape = shape.to_vec();
    out_shape[axis] = out_len;
    let in_st = strides(shape)[axis];
    let out_st = strides(&out_shape)[axis];
    let in_bases = base_offsets(shape, &[axis]);
    let out_bases = base_offsets(&out_shape, &[axis]);
    let n = shape[axis];
    let mut out = vec![Complex64::default(); out_shape.iter().product()];
    let mut lane = vec![Complex64::default(); n];
    let mut res = vec![Complex64::default(); out_len];
    for (&ib, &ob) in in_bases.iter().zip(&out_bases) {
        for (i, v) in lane.iter_mut().enumerate() {
            *v = values[ib + i * in_st];
        }
        res.iter_mut().for_each(|v| *v = Complex64::default());
        f(&lane, &mut res);
        for (i, v) in res.iter().enumerate() {
            out[ob + i * out_st] = *v;
        }
    }
    (out, out_shape)
}

/// Maps every 2-D plane spanned by axes `a` and `b` (row index along `a`) to a
/// plane of shape `out_a × out_b`.
pub(crate) fn map_planes(
    values: &[Complex64],
    shape: &[usize],
    a: usize,
    b: usize,
    out_a: usize,
    out_b: usize,
    mut f: impl FnMut(&[Complex64], &mut [Complex64]),
) -> (Vec<Complex64>, Vec<usize>) {
    let mut out_shape = shape.to_vec();
    out_shape[a] = out_a;
    out_shape[b] = out_b;
    let (ist, ost) = (strides(shape), strides(&out_shape));
    let in_bases = base_offsets(shape, &[a, b]);
    let out_bases = base_offsets(&out_shape, &[a, b]);
    let (na, nb) = (shape[a], shape[b]);
    let mut out = vec![Complex64::default(); out_shape.iter().product()];
    let mut plane = vec![Complex64::default(); na * nb];
    let mut res = vec![Complex64::default(); out_a * out_b];
    for (&ib, &ob) in in_bases.iter().zip(&out_bases) {
        for i in 0..na {
            for j in 0..nb {
                plane[i * nb + j] = values[ib + i * ist[a] + j * ist[b]];
            }
        }
        res.iter_mut().for_each(|v| *v = Complex64::default());
        f(&plane, &mut res);
        for i in 0..out_a {
            for j in 0..out_b {
                out[ob + i * ost[a] + j * ost[b]] = res[i * out_b + j];
            }
        }
    }
    (out, out_shape)
}

/// Signed frequency index of FFT bin `k` for length `n`.
#[inline]
fn signed_bin(k: usize, n: usize) -> f64 {
    if k < n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Band-limited translation `out(x_j) = in(x_j − δ·h)` with zero padding
/// outside the sampled interval (no periodic wrap-around).
pub(crate) struct Shifter {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    n: usize,
    buf: Vec<Complex64>,
}

impl Shifter {
    pub fn new(planner: &mut FftPlanner<f64>, n: usize) -> Self {
        Self {
            fwd: planner.plan_fft_forward(2 * n),
            inv: planner.plan_fft_inverse(2 * n),
            n,
            buf: vec![Complex64::default(); 2 * n],
        }
    }

    pub fn shift(&mut self, lane: &mut [Complex64], delta: f64) {
        if delta == 0.0 {
            return;
        }
        let (n, m) = (self.n, 2 * self.n);
        self.buf[..n].copy_from_slice(lane);
        self.buf[n..].iter_mut().for_each(|v| *v = Complex64::default());
        self.fwd.process(&mut self.buf);
        for (k, v) in self.buf.iter_mut().enumerate() {
            if k == n {
                // Nyquist bin: symmetric treatment keeps real data real.
                *v *= (PI * delta).cos();
            } else {
                let phase = -2.0 * PI * signed_bin(k, m) * delta / m as f64;
                *v *= Complex64::from_polar(1.0, phase);
            }
        }
        self.inv.process(&mut self.buf);
        let scale = 1.0 / m as f64;
        for (o, v) in lane.iter_mut().zip(&self.buf[..n]) {
            *o = *v * scale;
        }
    }
}

/// Band-limited interpolation of an `n`-node lane onto the `2n` nodes of half
/// spacing covering the same interval (even output nodes reproduce the input).
pub(crate) struct Upsampler {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    n: usize,
    spec: Vec<Complex64>,
    wide: Vec<Complex64>,
}

impl Upsampler {
    pub fn new(planner: &mut FftPlanner<f64>, n: usize) -> Self {
        Self {
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(2 * n),
            n,
            spec: vec![Complex64::default(); n],
            wide: vec![Complex64::default(); 2 * n],
        }
    }

    pub fn apply(&mut self, lane: &[Complex64], out: &mut [Complex64]) {
        let n = self.n;
        self.spec.copy_from_slice(lane);
        self.fwd.process(&mut self.spec);
        self.wide.iter_mut().for_each(|v| *v = Complex64::default());
        for k in 0..n / 2 {
            self.wide[k] = self.spec[k];
        }
        for k in n / 2 + 1..n {
            self.wide[k + n] = self.spec[k];
        }
        let nyq = self.spec[n / 2] * 0.5;
        self.wide[n / 2] = nyq;
        self.wide[n / 2 + n] = nyq;
        self.inv.process(&mut self.wide);
        let scale = 1.0 / n as f64;
        for (o, v) in out.iter_mut().zip(&self.wide) {
            *o = *v * scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(input: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = input.len();
        (0..n)
            .map(|l| {
                input
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let arg = sign * 2.0 * PI * (l as f64 - (n / 2) as f64)
                            * (j as f64 - (n / 2) as f64)
                            / n as f64;
                        v * Complex64::from_polar(1.0, arg)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn centered_dft_matches_direct_sum() {
        let mut planner = FftPlanner::new();
        for n in [6usize, 8, 16] {
            let input: Vec<Complex64> = (0..n)
                .map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 1.3).cos()))
                .collect();
            for (dir, sign) in [(Direction::Forward, -1.0), (Direction::Inverse, 1.0)] {
                let mut buf = input.clone();
                CenteredDft::new(&mut planner, n, dir).apply(&mut buf);
                let want = direct(&input, sign);
                for (a, b) in buf.iter().zip(&want) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn shift_of_gaussian() {
        let n = 64;
        let h = 0.25;
        let node = |j: usize| (j as f64 - 32.0) * h;
        let f = |x: f64| (-x * x / 2.0).exp();
        let mut lane: Vec<Complex64> = (0..n).map(|j| Complex64::new(f(node(j)), 0.0)).collect();
        let mut planner = FftPlanner::new();
        let mut sh = Shifter::new(&mut planner, n);
        sh.shift(&mut lane, 1.3 / h);
        for (j, v) in lane.iter().enumerate() {
            assert!((v.re - f(node(j) - 1.3)).abs() < 1e-10, "j={j}");
        }
    }

    #[test]
    fn upsample_gaussian() {
        let n = 64;
        let h = 0.25;
        let f = |x: f64| (-x * x / 2.0).exp() * (1.0 + x);
        let lane: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new(f((j as f64 - 32.0) * h), 0.0))
            .collect();
        let mut out = vec![Complex64::default(); 2 * n];
        let mut planner = FftPlanner::new();
        Upsampler::new(&mut planner, n).apply(&lane, &mut out);
        for (i, v) in out.iter().enumerate() {
            let x = (i as f64 - 64.0) * h / 2.0;
            assert!((v.re - f(x)).abs() < 1e-9, "i={i}");
        }
    }

    #[test]
    fn planes_and_lanes_visit_everything() {
        let shape = [2usize, 3, 4];
        let values: Vec<Complex64> = (0..24).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let (out, out_shape) = map_planes(&values, &shape, 0, 2, 2, 4, |p, o| o.copy_from_slice(p));
        assert_eq!(out_shape, vec![2, 3, 4]);
        assert_eq!(out, values);
        let mut v2 = values.clone();
        map_lanes(&mut v2, &shape, 1, |l| l.reverse());
        assert_eq!(v2[0].re, 8.0);
        let (up, s) = resize_lanes(&values, &shape, 2, 2, |l, o| {
            o[0] = l[0];
            o[1] = l[3];
        });
        assert_eq!(s, vec![2, 3, 2]);
        assert_eq!(up[1].re, 3.0);
    }
}
