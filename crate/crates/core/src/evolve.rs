//! Evolution under the regularised drift Hamiltonian `-eps d^2/dx^2 + i b d/dx`
//! with a Dirichlet wall at `x = 0`.
//!
//! Two engines compute `u_eps(t) = exp(-i t H_eps) phi` from independent
//! derivations:
//!
//! * [`spectral_evolve`] gauges away the drift, which leaves a free particle,
//!   solves that exactly on the odd extension to `[-L, L]` with an FFT, and
//!   undoes the gauge;
//! * [`kernel_evolve`] sums the two-term image kernel directly, `O(N^2)`.
//!
//! [`asymptotic_evolve`] evaluates the closed-form small-`eps` profile
//! `phi(x + bt) - theta(bt - x) phi(bt - x) e^{ibx/eps}`.

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{distance, reflect_sample, shift_sample, Grid, WaveFunction};
use crate::scalar::Real;

/// Minimum grid points per oscillation wavelength.
pub const PPW_MIN: f64 = 8.0;

/// Nodes with `|phi_j| <= KERNEL_SUPPORT_FLOOR * max|phi|` are skipped by the
/// kernel sum.
pub const KERNEL_SUPPORT_FLOOR: f64 = 1e-16;

// Kernel phases are resynchronised from the closed form this often.
const RESYNC_STRIDE: usize = 64;

#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> Complex<T> {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// Regularisation strength, drift, and evolution time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionParams<T> {
    epsilon: T,
    b: T,
    t: T,
}

impl<T: Real> EvolutionParams<T> {
    pub fn new(epsilon: T, b: T, t: T) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        if !b.is_finite() || b == T::zero() {
            return Err(Error::InvalidParameter(format!(
                "drift b must be finite and nonzero, got {b}"
            )));
        }
        if !(t.is_finite() && t >= T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "time must be nonnegative, got {t}"
            )));
        }
        Ok(Self { epsilon, b, t })
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn with_time(&self, t: T) -> Result<Self> {
        Self::new(self.epsilon, self.b, t)
    }
}

/// How well a grid resolves an oscillation scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResolutionReport {
    pub spacing: f64,
    pub wavelength: f64,
    pub points_per_wavelength: f64,
    pub admissible: bool,
}

impl ResolutionReport {
    fn from_wavelength(spacing: f64, wavelength: f64) -> Self {
        let points_per_wavelength = wavelength / spacing;
        Self {
            spacing,
            wavelength,
            points_per_wavelength,
            admissible: points_per_wavelength >= PPW_MIN,
        }
    }

    /// Resolution of the `e^{ibx/eps}` factor, wavelength `2 pi eps / |b|`.
    pub fn gauge<T: Real>(grid: &Grid<T>, epsilon: T, b: T) -> Self {
        let wavelength = 2.0 * std::f64::consts::PI * epsilon.as_f64() / b.as_f64().abs();
        Self::from_wavelength(grid.spacing().as_f64(), wavelength)
    }

    /// Resolution of the image kernel's chirp `e^{i d^2 / (4 eps t)}` at the
    /// largest offset `d` it is sampled at: local wavelength `4 pi eps t / d`.
    pub fn kernel<T: Real>(grid: &Grid<T>, epsilon: T, t: T, max_offset: T) -> Self {
        let wavelength =
            4.0 * std::f64::consts::PI * epsilon.as_f64() * t.as_f64() / max_offset.as_f64();
        Self::from_wavelength(grid.spacing().as_f64(), wavelength)
    }

    pub fn require(self) -> Result<Self> {
        if self.admissible {
            Ok(self)
        } else {
            Err(Error::InadmissibleResolution(self))
        }
    }
}

/// Smallest `eps` whose gauge wavelength is admissible on `grid` for drift `b`.
pub fn min_admissible_epsilon<T: Real>(grid: &Grid<T>, b: T) -> f64 {
    PPW_MIN * grid.spacing().as_f64() * b.as_f64().abs() / (2.0 * std::f64::consts::PI)
}

/// Free Schrödinger flow `i v_t = -eps v_xx` on `[0, L]` with Dirichlet walls,
/// by odd extension to the periodic interval `[-L, L]`.
///
/// Mode `xi = pi m / L` is multiplied by `e^{-i eps xi^2 t}`, the symbol of the
/// free kernel `e^{-i pi/4} (4 pi eps t)^{-1/2} e^{i (x-y)^2 / (4 eps t)}`.
pub fn free_dirichlet_propagate<T: Real>(v: &WaveFunction<T>, epsilon: T, t: T) -> WaveFunction<T> {
    let grid = *v.grid();
    let n = grid.points();
    let m = 2 * n;
    let zero = Complex::new(T::zero(), T::zero());

    // extended node k sits at -L + (k + 1/2) h, so k < n mirrors node n-1-k
    let mut buf = vec![zero; m];
    let amps = v.amplitudes();
    for j in 0..n {
        buf[n + j] = amps[j];
        buf[n - 1 - j] = -amps[j];
    }

    let mut planner = FftPlanner::<T>::new();
    planner.plan_fft_forward(m).process(&mut buf);

    let dxi = T::PI() / grid.length();
    let rate = epsilon * t;
    for (k, c) in buf.iter_mut().enumerate() {
        let idx = if k <= n {
            k as f64
        } else {
            k as f64 - m as f64
        };
        let xi = T::lit(idx) * dxi;
        *c *= cis(-rate * xi * xi);
    }

    planner.plan_fft_inverse(m).process(&mut buf);
    let scale = T::from_usize_lossy(m).recip();
    let out = buf[n..].iter().map(|c| *c * scale).collect();
    WaveFunction::new(grid, out).expect("restriction has one sample per node")
}

/// `u_eps(t) = exp(-i t H_eps) phi` by gauge transform and exact free-particle
/// propagation.
///
/// Steps: multiply by `e^{-ibx/(2 eps)}`, propagate freely with Dirichlet
/// walls, multiply by `e^{i b^2 t/(4 eps) + ibx/(2 eps)}`.
pub fn spectral_evolve<T: Real>(
    phi: &WaveFunction<T>,
    p: &EvolutionParams<T>,
) -> Result<WaveFunction<T>> {
    ResolutionReport::gauge(phi.grid(), p.epsilon, p.b).require()?;
    if p.t == T::zero() {
        return Ok(phi.clone());
    }
    let half_k = p.b / (T::lit(2.0) * p.epsilon);
    let gauged = phi.map(|x, a| a * cis(-half_k * x));
    let free = free_dirichlet_propagate(&gauged, p.epsilon, p.t);
    let energy = p.b * p.b * p.t / (T::lit(4.0) * p.epsilon);
    Ok(free.map(|x, a| a * cis(energy + half_k * x)))
}

/// `u_eps(t)` by midpoint summation of the image kernel
///
/// `e^{-i pi/4} / sqrt(4 pi eps t) * int_0^inf [e^{i(x-y+bt)^2/(4 eps t)}
///  - e^{i(x+y-bt)^2/(4 eps t)} e^{ibx/eps}] phi(y) dy`.
///
/// Valid for `b > 0`, `t > 0` and data satisfying the Dirichlet condition.
/// Refuses when either the gauge factor or the kernel chirp is under-resolved.
pub fn kernel_evolve<T: Real>(
    phi: &WaveFunction<T>,
    p: &EvolutionParams<T>,
) -> Result<WaveFunction<T>> {
    if p.t == T::zero() {
        return Err(Error::SingularTime);
    }
    if p.b <= T::zero() {
        return Err(Error::UnsupportedDrift(p.b.as_f64()));
    }
    phi.check_boundary()?;
    let grid = *phi.grid();
    ResolutionReport::gauge(&grid, p.epsilon, p.b).require()?;

    let amps = phi.amplitudes();
    let floor = phi.max_abs() * T::lit(KERNEL_SUPPORT_FLOOR);
    let lo = amps.iter().position(|a| a.norm() > floor);
    let hi = amps.iter().rposition(|a| a.norm() > floor);
    let (lo, hi) = match (lo, hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Ok(WaveFunction::zeros(grid)),
    };

    let h = grid.spacing();
    let bt = p.b * p.t;
    let (x_min, x_max) = (grid.node(0), grid.node(grid.points() - 1));
    let (y_lo, y_hi) = (grid.node(lo), grid.node(hi));
    let max_offset = [
        x_max - y_lo + bt,
        x_min - y_hi + bt,
        x_max + y_hi - bt,
        x_min + y_lo - bt,
    ]
    .iter()
    .fold(T::zero(), |m, d| m.max(d.abs()));
    ResolutionReport::kernel(&grid, p.epsilon, p.t, max_offset).require()?;

    let kappa = (T::lit(4.0) * p.epsilon * p.t).recip();
    let prefactor = cis(-T::FRAC_PI_4()) * (h / (T::lit(4.0) * T::PI() * p.epsilon * p.t).sqrt());
    let k = p.b / p.epsilon;
    let support = &amps[lo..=hi];

    let out: Vec<Complex<T>> = (0..grid.points())
        .into_par_iter()
        .map(|j| {
            let x = grid.node(j);
            let direct = chirp_sum(support, kappa, h, x - y_lo + bt, -T::one());
            let image = chirp_sum(support, kappa, h, x + y_lo - bt, T::one());
            prefactor * (direct - image * cis(k * x))
        })
        .collect();
    WaveFunction::new(grid, out)
}

/// `sum_k e^{i kappa d_k^2} f_k` with `d_k = d0 + sign * k * h`, summed in
/// index order.
///
/// Consecutive phase increments differ by the constant `2 kappa h^2`, so both
/// the running phasor and its increment advance by one complex product each.
fn chirp_sum<T: Real>(f: &[Complex<T>], kappa: T, h: T, d0: T, sign: T) -> Complex<T> {
    let two = T::lit(2.0);
    let ratio = cis(two * kappa * h * h);
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut phasor = Complex::new(T::one(), T::zero());
    let mut step = phasor;
    for (k, &fk) in f.iter().enumerate() {
        if k % RESYNC_STRIDE == 0 {
            let d = d0 + sign * T::from_usize_lossy(k) * h;
            phasor = cis(kappa * d * d);
            step = cis(kappa * h * (two * sign * d + h));
        }
        acc += phasor * fk;
        phasor *= step;
        step *= ratio;
    }
    acc
}

/// The two pieces of the small-`eps` profile: the transported wave
/// `phi(x + bt)` and the reflected wave `psi_eps = e^{ibx/eps} theta(bt - x) phi(bt - x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticBranches<T> {
    pub transported: WaveFunction<T>,
    pub reflected: WaveFunction<T>,
}

impl<T: Real> AsymptoticBranches<T> {
    pub fn combine(&self) -> WaveFunction<T> {
        self.transported
            .try_sub(&self.reflected)
            .expect("branches share a grid")
    }
}

/// The oscillating reflected wave `psi_eps(t, x) = e^{ibx/eps} phi(bt - x)` on `[0, bt]`.
pub fn reflected_wave<T: Real>(phi: &WaveFunction<T>, p: &EvolutionParams<T>) -> WaveFunction<T> {
    let k = p.b / p.epsilon;
    reflect_sample(phi, p.b * p.t).map(|x, a| a * cis(k * x))
}

pub fn asymptotic_branches<T: Real>(
    phi: &WaveFunction<T>,
    p: &EvolutionParams<T>,
) -> Result<AsymptoticBranches<T>> {
    if p.b <= T::zero() {
        return Err(Error::UnsupportedDrift(p.b.as_f64()));
    }
    let report = ResolutionReport::gauge(phi.grid(), p.epsilon, p.b);
    if !report.admissible {
        log::warn!(
            "e^(ibx/eps) sampled at {:.2} points per wavelength; pointwise values only",
            report.points_per_wavelength
        );
    }
    Ok(AsymptoticBranches {
        transported: shift_sample(phi, p.b * p.t),
        reflected: reflected_wave(phi, p),
    })
}

/// `v_eps(t, x) = phi(x + bt) - theta(bt - x) phi(bt - x) e^{ibx/eps}`.
pub fn asymptotic_evolve<T: Real>(
    phi: &WaveFunction<T>,
    p: &EvolutionParams<T>,
) -> Result<WaveFunction<T>> {
    Ok(asymptotic_branches(phi, p)?.combine())
}

/// `||u_eps(t) - v_eps(t)||`, with `u_eps` from the spectral engine.
pub fn remainder_norm<T: Real>(phi: &WaveFunction<T>, p: &EvolutionParams<T>) -> Result<T> {
    let v = asymptotic_evolve(phi, p)?;
    let u = spectral_evolve(phi, p)?;
    distance(&u, &v)
}

/// The limit group `V_b(t) phi = phi(x + bt)`, zero-filled.
///
/// For `b < 0`, `t >= 0` this is the isometric right shift `e^{-itH}`; for
/// `b > 0` it is the contraction `e^{-itH*}` that discards the mass on `[0, bt]`.
pub fn limit_group_v<T: Real>(phi: &WaveFunction<T>, b: T, t: T) -> WaveFunction<T> {
    shift_sample(phi, b * t)
}
