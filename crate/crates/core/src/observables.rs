//! Observables from the two algebras and their expectation functionals.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::evolve::{spectral_evolve, EvolutionParams};
use crate::grid::{inner, BoundedFunction, WaveFunction};
use crate::limit::{comp_state_evolve, require_unit, shift_v};
use crate::scalar::Real;

/// Tolerance on `||phi_k|| = 1` for finite-rank terms.
pub const TERM_UNIT_TOL: f64 = 1e-8;

/// Multiplication by a bounded function.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicationObservable<T> {
    f: BoundedFunction<T>,
}

impl<T: Real> MultiplicationObservable<T> {
    pub fn new(f: BoundedFunction<T>) -> Self {
        Self { f }
    }

    pub fn function(&self) -> &BoundedFunction<T> {
        &self.f
    }

    /// `h sum conj(u_j) f_j u_j`.
    pub fn expectation(&self, u: &WaveFunction<T>) -> Result<Complex<T>> {
        if self.f.grid() != u.grid() {
            return Err(Error::GridMismatch);
        }
        let h = u.grid().spacing();
        let s = u
            .amplitudes()
            .iter()
            .zip(self.f.values())
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, f)| {
                acc + *f * a.norm_sqr()
            });
        Ok(s * h)
    }
}

/// `A = sum_k c_k |phi_k><phi_k|` with unit vectors `phi_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteRankObservable<T> {
    terms: Vec<(T, WaveFunction<T>)>,
}

impl<T: Real> FiniteRankObservable<T> {
    pub fn new(terms: Vec<(T, WaveFunction<T>)>) -> Result<Self> {
        if let Some((_, first)) = terms.first() {
            let grid = first.grid();
            for (c, phi) in &terms {
                if phi.grid() != grid {
                    return Err(Error::GridMismatch);
                }
                if !c.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "coefficient {c} is not finite"
                    )));
                }
                require_unit(phi, TERM_UNIT_TOL)?;
            }
        }
        Ok(Self { terms })
    }

    /// The rank-one projector onto `phi / ||phi||`.
    pub fn projector(phi: &WaveFunction<T>) -> Result<Self> {
        Self::new(vec![(T::one(), phi.normalized()?)])
    }

    pub fn terms(&self) -> &[(T, WaveFunction<T>)] {
        &self.terms
    }

    /// `sum_k c_k |<phi_k, u>|^2`.
    pub fn expectation(&self, u: &WaveFunction<T>) -> Result<Complex<T>> {
        let mut acc = T::zero();
        for (c, phi) in &self.terms {
            acc += *c * inner(phi, u)?.norm_sqr();
        }
        Ok(Complex::new(acc, T::zero()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Observable<T> {
    Multiplication(MultiplicationObservable<T>),
    FiniteRank(FiniteRankObservable<T>),
}

impl<T: Real> From<MultiplicationObservable<T>> for Observable<T> {
    fn from(a: MultiplicationObservable<T>) -> Self {
        Observable::Multiplication(a)
    }
}

impl<T: Real> From<FiniteRankObservable<T>> for Observable<T> {
    fn from(a: FiniteRankObservable<T>) -> Self {
        Observable::FiniteRank(a)
    }
}

/// The raw quadratic form `<u, A u>`; `u` is not required to be a unit vector.
pub fn expectation<T: Real>(u: &WaveFunction<T>, a: &Observable<T>) -> Result<Complex<T>> {
    match a {
        Observable::Multiplication(m) => m.expectation(u),
        Observable::FiniteRank(k) => k.expectation(u),
    }
}

/// `<u_eps(t), A u_eps(t)>` with `u_eps` from the spectral engine.
pub fn regularized_expectation<T: Real>(
    phi: &WaveFunction<T>,
    a: &Observable<T>,
    p: &EvolutionParams<T>,
) -> Result<Complex<T>> {
    expectation(&spectral_evolve(phi, p)?, a)
}

/// Limit of the regularised expectation of a finite-rank observable:
/// `<V_t phi, A V_t phi>`.
pub fn comp_expectation_limit<T: Real>(
    phi: &WaveFunction<T>,
    a: &FiniteRankObservable<T>,
    b: T,
    t: T,
) -> Result<Complex<T>> {
    require_unit(phi, crate::limit::UNIT_TOL)?;
    a.expectation(&shift_v(phi, b, t)?)
}

/// Limit state evaluated on `lambda I + A`: `lambda + alpha <Phi, A Phi>`.
pub fn comp_state_expectation<T: Real>(
    phi: &WaveFunction<T>,
    lambda: T,
    a: &FiniteRankObservable<T>,
    b: T,
    t: T,
) -> Result<Complex<T>> {
    comp_state_evolve(phi, b, t)?.expectation(lambda, |u| a.expectation(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn grid() -> Grid<f64> {
        Grid::new(40.0, 1 << 14).unwrap()
    }

    fn xexp(g: Grid<f64>) -> WaveFunction<f64> {
        let c = (16.0 / (2.0 * std::f64::consts::PI).sqrt()).sqrt();
        WaveFunction::from_real_fn(g, move |x| c * x * (-x * x).exp())
    }

    #[test]
    fn identity_and_self_projector() {
        let g = grid();
        let u = xexp(g);
        let one = Observable::from(MultiplicationObservable::new(BoundedFunction::constant(
            g, 1.0,
        )));
        assert!((expectation(&u, &one).unwrap().re - 1.0).abs() < 1e-12);
        let p = Observable::from(FiniteRankObservable::projector(&u).unwrap());
        assert!((expectation(&u, &p).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_projector_vanishes() {
        let g = grid();
        let u = xexp(g);
        // supported on [10, 11], where u is below e^{-100}
        let far = WaveFunction::from_real_fn(g, |x| {
            if (10.0..=11.0).contains(&x) {
                2f64.sqrt() * (std::f64::consts::PI * (x - 10.0)).sin()
            } else {
                0.0
            }
        });
        let p = FiniteRankObservable::projector(&far).unwrap();
        assert!(p.expectation(&u).unwrap().norm() < 1e-30);
    }

    #[test]
    fn rejects_non_unit_terms() {
        let g = grid();
        let u = xexp(g).scaled(Complex::new(1.5, 0.0));
        assert!(matches!(
            FiniteRankObservable::new(vec![(1.0, u)]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn regularized_identity_is_unit() {
        let g = Grid::new(40.0, 1 << 16).unwrap();
        let u = xexp(g);
        let one = Observable::from(MultiplicationObservable::new(BoundedFunction::constant(
            g, 1.0,
        )));
        for (eps, t) in [(0.2, 0.5), (0.05, 1.0), (0.0125, 2.0)] {
            let p = EvolutionParams::new(eps, 1.0, t).unwrap();
            let v = regularized_expectation(&u, &one, &p).unwrap();
            assert!((v.re - 1.0).abs() < 1e-9);
        }
        let p = EvolutionParams::new(0.1, 1.0, 0.0).unwrap();
        let a = Observable::from(FiniteRankObservable::projector(&u).unwrap());
        assert_eq!(
            regularized_expectation(&u, &a, &p).unwrap(),
            expectation(&u, &a).unwrap()
        );
    }

    #[test]
    fn limit_self_projection_gives_alpha() {
        let g = grid();
        let phi = xexp(g);
        let (b, t) = (1.0, 0.9);
        let moved = shift_v(&phi, b, t).unwrap();
        let a = FiniteRankObservable::projector(&moved).unwrap();
        let lim = comp_expectation_limit(&phi, &a, b, t).unwrap();
        assert!((lim.re - moved.norm_sqr()).abs() < 1e-12);
        let full = comp_state_expectation(&phi, 0.25, &a, b, t).unwrap();
        assert!((full.re - 0.25 - lim.re).abs() < 1e-12);
    }

    #[test]
    fn expectation_is_linear_in_coefficients() {
        let g = grid();
        let u = xexp(g);
        let v = WaveFunction::from_real_fn(g, |x| x * x * (-x).exp())
            .normalized()
            .unwrap();
        let w = u.normalized().unwrap();
        let a = FiniteRankObservable::new(vec![(2.0, v.clone()), (-0.5, w.clone())]).unwrap();
        let sep = 2.0
            * FiniteRankObservable::projector(&v)
                .unwrap()
                .expectation(&u)
                .unwrap()
            - 0.5
                * FiniteRankObservable::projector(&w)
                    .unwrap()
                    .expectation(&u)
                    .unwrap();
        assert!((a.expectation(&u).unwrap() - sep).norm() < 1e-14);
    }
}
