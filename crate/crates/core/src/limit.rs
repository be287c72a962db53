//! The `eps -> 0` limit dynamics.
//!
//! On multiplication observables the limit is the two-branch channel
//! `rho -> V rho V* + W rho W*`, with `V_t u(x) = u(x + bt)` and
//! `W_t u(x) = u(bt - x)` on `[0, bt]`. On compact observables only the
//! transported branch survives; the lost mass `1 - alpha` sits on a singular
//! state `J` that annihilates every compact operator and is carried here as a
//! bare weight.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::{
    distance, indicator_project, inner, reflect_sample, shift_sample, BoundedFunction, Grid,
    WaveFunction,
};
use crate::scalar::Real;

/// Below this normal weight the normal part of a compact-algebra state is
/// declared absent.
pub const ALPHA_FLOOR: f64 = 1e-12;

/// Cumulative mass that marks the start of the numerical support.
pub const MASS_FLOOR: f64 = 1e-12;

/// Tolerance on `||phi|| = 1` for pure-state inputs.
pub const UNIT_TOL: f64 = 1e-6;

pub(crate) fn require_unit<T: Real>(phi: &WaveFunction<T>, tol: f64) -> Result<()> {
    let n = phi.norm().as_f64();
    if (n - 1.0).abs() > tol {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

fn require_drift<T: Real>(b: T) -> Result<()> {
    if b > T::zero() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::UnsupportedDrift(b.as_f64()))
    }
}

fn require_time<T: Real>(t: T) -> Result<()> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "time must be nonnegative, got {t}"
        )))
    }
}

/// `V_t u(x) = u(x + bt)`.
pub fn shift_v<T: Real>(phi: &WaveFunction<T>, b: T, t: T) -> Result<WaveFunction<T>> {
    require_drift(b)?;
    require_time(t)?;
    Ok(shift_sample(phi, b * t))
}

/// `W_t u(x) = u(bt - x)` for `x` in `[0, bt]`, zero beyond.
pub fn reflect_w<T: Real>(phi: &WaveFunction<T>, b: T, t: T) -> Result<WaveFunction<T>> {
    require_drift(b)?;
    require_time(t)?;
    let c = b * t;
    indicator_project(&reflect_sample(phi, c), T::zero(), c)
}

/// The two unnormalised branches of the limit channel applied to a pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausBranchState<T> {
    branches: [WaveFunction<T>; 2],
}

impl<T: Real> KrausBranchState<T> {
    pub fn branches(&self) -> &[WaveFunction<T>; 2] {
        &self.branches
    }

    /// `V_t phi`.
    pub fn shift(&self) -> &WaveFunction<T> {
        &self.branches[0]
    }

    /// `W_t phi`.
    pub fn reflected(&self) -> &WaveFunction<T> {
        &self.branches[1]
    }

    pub fn probabilities(&self) -> [T; 2] {
        [self.branches[0].norm_sqr(), self.branches[1].norm_sqr()]
    }

    /// `sum_i <B_i, A B_i>` for a quadratic form `A`.
    pub fn expectation(
        &self,
        form: impl Fn(&WaveFunction<T>) -> Result<Complex<T>>,
    ) -> Result<Complex<T>> {
        Ok(form(&self.branches[0])? + form(&self.branches[1])?)
    }
}

pub fn kraus_apply<T: Real>(phi: &WaveFunction<T>, b: T, t: T) -> Result<KrausBranchState<T>> {
    require_unit(phi, UNIT_TOL)?;
    Ok(KrausBranchState {
        branches: [shift_v(phi, b, t)?, reflect_w(phi, b, t)?],
    })
}

/// `lim <u_eps(t), f u_eps(t)> = <V phi, f V phi> + <W phi, f W phi>`.
pub fn mult_expectation_limit<T: Real>(
    phi: &WaveFunction<T>,
    f: &BoundedFunction<T>,
    b: T,
    t: T,
) -> Result<Complex<T>> {
    if f.grid() != phi.grid() {
        return Err(Error::GridMismatch);
    }
    kraus_apply(phi, b, t)?.expectation(|u| inner(u, &f.apply(u)?))
}

/// A state on the compact-operator algebra: `alpha rho_Phi + (1 - alpha) J`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompAlgebraState<T> {
    alpha: T,
    phi: Option<WaveFunction<T>>,
}

impl<T: Real> CompAlgebraState<T> {
    /// Weight of the normal part.
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// The unit vector `Phi` of the normal part; `None` once it has been destroyed.
    pub fn normal_part(&self) -> Option<&WaveFunction<T>> {
        self.phi.as_ref()
    }

    /// Weight of `J`.
    pub fn singular_weight(&self) -> T {
        T::one() - self.alpha
    }

    pub fn is_singular(&self) -> bool {
        self.phi.is_none()
    }

    /// Value on `lambda I + K` with `K` given by its quadratic form; `J`
    /// contributes `lambda` and nothing from `K`.
    pub fn expectation(
        &self,
        lambda: T,
        compact: impl Fn(&WaveFunction<T>) -> Result<Complex<T>>,
    ) -> Result<Complex<T>> {
        let normal = match &self.phi {
            Some(phi) => compact(phi)? * self.alpha,
            None => Complex::new(T::zero(), T::zero()),
        };
        Ok(normal + lambda)
    }
}

/// `alpha = ||V_t phi||^2 / ||phi||^2`, `Phi = V_t phi / ||V_t phi||`.
///
/// Dividing by the discrete `||phi||^2` makes `t = 0` exactly pure; the clamp
/// only absorbs interpolation overshoot, which is below `1e-9` on desk grids.
pub fn comp_state_evolve<T: Real>(
    phi: &WaveFunction<T>,
    b: T,
    t: T,
) -> Result<CompAlgebraState<T>> {
    require_unit(phi, UNIT_TOL)?;
    let w = shift_v(phi, b, t)?;
    let kept = w.norm_sqr();
    let alpha = (kept / phi.norm_sqr()).min(T::one());
    if alpha > T::lit(ALPHA_FLOOR) {
        Ok(CompAlgebraState {
            alpha,
            phi: Some(w.scaled(Complex::new(kept.sqrt().recip(), T::zero()))),
        })
    } else {
        Ok(CompAlgebraState {
            alpha: T::zero(),
            phi: None,
        })
    }
}

/// `T_* = inf supp phi / b`, the last time at which the pure state survives intact.
///
/// The support edge is the first node at which the cumulative mass exceeds
/// [`MASS_FLOOR`].
pub fn destruction_time<T: Real>(phi: &WaveFunction<T>, b: T) -> Result<T> {
    require_unit(phi, UNIT_TOL)?;
    require_drift(b)?;
    let h = phi.grid().spacing();
    let floor = T::lit(MASS_FLOOR);
    let mut mass = T::zero();
    for (x, a) in phi.grid().nodes().zip(phi.amplitudes()) {
        mass += h * a.norm_sqr();
        if mass > floor {
            return Ok(x / b);
        }
    }
    Err(Error::ZeroFunction)
}

/// Orthogonal decomposition of the grid at `x = bt`: `V_t* V_t` keeps
/// `(bt, L]`, its complement keeps `[0, bt]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WoldProjectors<T> {
    grid: Grid<T>,
    t: T,
    edge: T,
}

impl<T: Real> WoldProjectors<T> {
    pub fn t(&self) -> T {
        self.t
    }

    pub fn edge(&self) -> T {
        self.edge
    }

    /// Keeps nodes with `x_j > bt`.
    pub fn unitary(&self, u: &WaveFunction<T>) -> Result<WaveFunction<T>> {
        self.split(u).map(|(_, keep)| keep)
    }

    /// Keeps nodes with `x_j <= bt`.
    pub fn shift(&self, u: &WaveFunction<T>) -> Result<WaveFunction<T>> {
        self.split(u).map(|(keep, _)| keep)
    }

    fn split(&self, u: &WaveFunction<T>) -> Result<(WaveFunction<T>, WaveFunction<T>)> {
        if *u.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let zero = Complex::new(T::zero(), T::zero());
        let edge = self.edge;
        let lower = u.map(|x, a| if x <= edge { a } else { zero });
        let upper = u.map(|x, a| if x <= edge { zero } else { a });
        Ok((lower, upper))
    }
}

pub fn wold_projectors<T: Real>(b: T, t: T, grid: &Grid<T>) -> Result<WoldProjectors<T>> {
    require_drift(b)?;
    require_time(t)?;
    Ok(WoldProjectors {
        grid: *grid,
        t,
        edge: b * t,
    })
}

/// Defect of the semigroup law for the compact-algebra flow:
/// `|alpha(t+tau) - alpha(tau) alpha(t; Phi(tau))| + ||Phi(t+tau) - Phi(t; Phi(tau))||`.
///
/// Any factor whose normal part has been destroyed contributes only through
/// the weights; both sides then agree on the fully singular state.
pub fn comp_semigroup_check<T: Real>(phi: &WaveFunction<T>, b: T, t: T, tau: T) -> Result<T> {
    let whole = comp_state_evolve(phi, b, t + tau)?;
    if tau == T::zero() {
        // T^0 is the identity, so the composition is `whole` itself
        return Ok(T::zero());
    }
    let first = comp_state_evolve(phi, b, tau)?;
    let Some(mid) = first.normal_part() else {
        return Ok(whole.alpha().abs());
    };
    // Phi(tau) is unit to round-off; renormalise so the unit check cannot trip
    let mid = mid.normalized()?;
    let second = comp_state_evolve(&mid, b, t)?;
    let weight = (whole.alpha() - first.alpha() * second.alpha()).abs();
    let vector = match (whole.normal_part(), second.normal_part()) {
        (Some(a), Some(c)) => distance(a, c)?,
        (None, None) => T::zero(),
        // one side destroyed, the other not: the unit vector is entirely defect
        _ => T::one(),
    };
    Ok(weight + vector)
}
