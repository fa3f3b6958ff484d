//! Independent reference computations shared by the integration tests. Nothing
//! here calls into the library's solvers.

#![allow(dead_code)]

use num_complex::Complex64;

/// Fixed-step classical RK4 over `[0, end]`.
pub fn rk4<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    init: [f64; N],
    end: f64,
    steps: usize,
) -> [f64; N] {
    let h = end / steps as f64;
    let mut y = init;
    let axpy = |y: &[f64; N], k: &[f64; N], a: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += a * k[i];
        }
        out
    };
    for n in 0..steps {
        let s = n as f64 * h;
        let k1 = f(s, &y);
        let k2 = f(s + 0.5 * h, &axpy(&y, &k1, 0.5 * h));
        let k3 = f(s + 0.5 * h, &axpy(&y, &k2, 0.5 * h));
        let k4 = f(s + h, &axpy(&y, &k3, h));
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// Linearized propagation through one pass, integrated numerically together
/// with the mean fields. Variables are scaled so that the pass has length
/// `zeta`: mean fields `(a1, a2)` start at `(1, 0)` and obey
/// `a1' = -sqrt2 a1 a2`, `a2' = a1^2 / sqrt2`; fluctuations obey
/// `x1' = -sqrt2 (a1 x2 + a2 x1)`, `x2' = sqrt2 a1 x1`,
/// `y1' = -sqrt2 (a1 y2 - a2 y1)`, `y2' = sqrt2 a1 y1`.
/// Returns the 4x4 map on `(x1, x2, y1, y2)` in row-major order, refining the
/// step until successive results agree to `1e-13`.
pub fn linearized_transfer(zeta: f64) -> [[f64; 4]; 4] {
    let r2 = std::f64::consts::SQRT_2;
    let rhs = |_: f64, v: &[f64; 6]| {
        let [a1, a2, x1, x2, y1, y2] = *v;
        [
            -r2 * a1 * a2,
            a1 * a1 / r2,
            -r2 * (a1 * x2 + a2 * x1),
            r2 * a1 * x1,
            -r2 * (a1 * y2 - a2 * y1),
            r2 * a1 * y1,
        ]
    };
    let solve = |steps: usize| {
        let mut m = [[0.0; 4]; 4];
        for col in 0..4 {
            let mut init = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
            init[2 + col] = 1.0;
            let out = rk4(rhs, init, zeta, steps);
            for row in 0..4 {
                m[row][col] = out[2 + row];
            }
        }
        m
    };
    let mut steps = 16;
    let mut prev = solve(steps);
    loop {
        steps *= 2;
        let next = solve(steps);
        let diff = prev
            .iter()
            .flatten()
            .zip(next.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if diff < 1e-13 || steps > 1 << 16 {
            return next;
        }
        prev = next;
    }
}

/// Integrates the photon-flux amplitude equations `A1' = -conj(k) conj(A1) A2`,
/// `A2' = (k/2) A1^2` over `[0, length]` from `A2(0) = 0`.
/// Returns `(A1(L), A2(L))`.
pub fn mean_field_pass(
    a1: Complex64,
    kappa: Complex64,
    length: f64,
    steps: usize,
) -> (Complex64, Complex64) {
    let rhs = |_: f64, v: &[f64; 4]| {
        let a1 = Complex64::new(v[0], v[1]);
        let a2 = Complex64::new(v[2], v[3]);
        let d1 = -kappa.conj() * a1.conj() * a2;
        let d2 = 0.5 * kappa * a1 * a1;
        [d1.re, d1.im, d2.re, d2.im]
    };
    let out = rk4(rhs, [a1.re, a1.im, 0.0, 0.0], length, steps);
    (
        Complex64::new(out[0], out[1]),
        Complex64::new(out[2], out[3]),
    )
}

/// Bisection on the single-crystal ring equation
/// `s = 4 T sqrt(E P) / [2 - sqrt(1-T) (2 - L - s sqrt(E P))]^2`, `s = sqrt(eps1)`.
/// `None` when no root lies in the physical range `eps1 <= 1`, `s sqrt(E P) <= 1`.
pub fn ring_eps1_bisection(t11: f64, l13: f64, enl: f64, p_in: f64) -> Option<f64> {
    let root = (enl * p_in).sqrt();
    let g = |s: f64| {
        let den = 2.0 - (1.0 - t11).sqrt() * (2.0 - l13 - s * root);
        s - 4.0 * t11 * root / (den * den)
    };
    let (mut lo, mut hi) = (0.0f64, (1.0 / root).min(1.0));
    if g(lo) > 0.0 || g(hi) < 0.0 {
        return None;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    Some(s * s)
}

/// Composite Simpson rule for the focusing integral with `n` (even) panels.
pub fn h_simpson(dk_lc: f64, focus: f64, n: usize) -> Complex64 {
    let f = |xi: f64| Complex64::new(0.0, dk_lc * xi).exp() / Complex64::new(1.0, focus * xi);
    let step = 1.0 / n as f64;
    let mut sum = f(-0.5) + f(0.5);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(-0.5 + i as f64 * step);
    }
    sum * step / 3.0
}

/// Brute-force maximum of `focus |h|^2` on a regular grid, refined by
/// re-gridding around the incumbent. Returns `(dk_lc, focus, figure)`.
pub fn brute_force_focus_optimum(
    dk: (f64, f64),
    focus: (f64, f64),
    (n_dk, n_focus): (usize, usize),
    rounds: usize,
) -> (f64, f64, f64) {
    let mut range_dk = dk;
    let mut range_f = focus;
    let mut n = (n_dk, n_focus);
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for _ in 0..=rounds {
        for i in 0..n.0 {
            let d = range_dk.0 + (range_dk.1 - range_dk.0) * i as f64 / (n.0 - 1) as f64;
            for j in 0..n.1 {
                let f = range_f.0 + (range_f.1 - range_f.0) * j as f64 / (n.1 - 1) as f64;
                let v = f * h_simpson(d, f, 400).norm_sqr();
                if v > best.2 {
                    best = (d, f, v);
                }
            }
        }
        let span_dk = 2.0 * (range_dk.1 - range_dk.0) / (n.0 - 1) as f64;
        let span_f = 2.0 * (range_f.1 - range_f.0) / (n.1 - 1) as f64;
        range_dk = ((best.0 - span_dk).max(dk.0), (best.0 + span_dk).min(dk.1));
        range_f = (
            (best.1 - span_f).max(focus.0),
            (best.1 + span_f).min(focus.1),
        );
        n = (21, 21);
    }
    best
}

/// Deterministic uniform draws for randomized equivalence checks.
pub struct Draws(rand::rngs::StdRng);

impl Draws {
    pub fn seeded(seed: u64) -> Self {
        use rand::SeedableRng;
        Self(rand::rngs::StdRng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        use rand::Rng;
        self.0.random_range(lo..hi)
    }
}
