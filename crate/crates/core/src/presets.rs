//! Closed-form initial data, each unit-norm on the half-line and zero at `x = 0`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Grid, WaveFunction};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `c x e^{-x^2}` with `c^2 = 4 sqrt(2/pi)`.
    Xexp,
    /// `sqrt(2) sin(pi (x - 1))` on `[1, 2]`.
    Bump12,
    /// `sqrt(2) sin(pi (x - 2))` on `[2, 3]`.
    Bump23,
    /// `sqrt(2/L) sin(k pi x / L)`, a Dirichlet eigenmode of the box.
    SineMode(u32),
}

impl Preset {
    pub const NAMED: [Preset; 3] = [Preset::Xexp, Preset::Bump12, Preset::Bump23];

    /// Value at `x` on a box of length `length` (only the sine modes use it).
    pub fn eval<T: Real>(&self, x: T, length: T) -> T {
        match *self {
            Preset::Xexp => {
                let c = (T::lit(16.0) / (T::lit(2.0) * T::PI()).sqrt()).sqrt();
                c * x * (-x * x).exp()
            }
            Preset::Bump12 => arch(x, T::one()),
            Preset::Bump23 => arch(x, T::lit(2.0)),
            Preset::SineMode(k) => {
                let k = T::lit(f64::from(k));
                (T::lit(2.0) / length).sqrt() * (k * T::PI() * x / length).sin()
            }
        }
    }

    pub fn sample<T: Real>(&self, grid: Grid<T>) -> WaveFunction<T> {
        let length = grid.length();
        WaveFunction::from_real_fn(grid, |x| self.eval(x, length))
    }

    /// Left edge of the support, where it is bounded away from zero.
    pub fn support_start(&self) -> f64 {
        match self {
            Preset::Bump12 => 1.0,
            Preset::Bump23 => 2.0,
            _ => 0.0,
        }
    }
}

fn arch<T: Real>(x: T, a: T) -> T {
    if x >= a && x <= a + T::one() {
        T::SQRT_2() * (T::PI() * (x - a)).sin()
    } else {
        T::zero()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Xexp => f.write_str("xexp"),
            Preset::Bump12 => f.write_str("bump12"),
            Preset::Bump23 => f.write_str("bump23"),
            Preset::SineMode(k) => write!(f, "sine-mode:{k}"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xexp" => Ok(Preset::Xexp),
            "bump12" => Ok(Preset::Bump12),
            "bump23" => Ok(Preset::Bump23),
            _ => {
                let k = s
                    .strip_prefix("sine-mode:")
                    .and_then(|k| k.parse::<u32>().ok())
                    .filter(|&k| k > 0);
                k.map(Preset::SineMode).ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "unknown preset {s:?}; expected xexp, bump12, bump23 or sine-mode:K"
                    ))
                })
            }
        }
    }
}
