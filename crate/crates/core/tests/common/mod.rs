//! Reference values computed from the closed-form presets, independent of the grid.

#![allow(dead_code)]

use halfline::Preset;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    // `ends` holds f at a, (a + b)/2, b
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        ends: [f64; 3],
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let [fa, fm, fb] = ends;
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, [fa, flm, fm], left, tol / 2.0, depth - 1)
                + step(f, m, b, [fm, frm, fb], right, tol / 2.0, depth - 1)
        }
    }
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, [fa, fm, fb], whole, tol, 50)
}

/// `int_a^b |phi|^2` for a named preset on a box of length `length`.
///
/// Integrates piecewise over the smooth pieces of the preset so the kinks of
/// the arches do not slow the recursion down.
pub fn mass(preset: Preset, a: f64, b: f64, length: f64) -> f64 {
    let dens = move |x: f64| preset.eval(x, length).powi(2);
    let mut cuts = vec![a, b];
    for k in [1.0, 2.0, 3.0] {
        if a < k && k < b {
            cuts.push(k);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .map(|w| simpson(&dens, w[0], w[1], 1e-13))
        .sum()
}

/// `alpha(t) = int_{bt}^L |phi|^2`.
pub fn alpha(preset: Preset, b: f64, t: f64, length: f64) -> f64 {
    mass(preset, b * t, length, length)
}
