//! Heat kernel of the Laplacian with a point interaction at the origin,
//! shifted by an infrared mass `epsilon`.
//!
//! The exponential integral over the auxiliary variable `w` is always
//! evaluated in closed form through `erfcx`; completing the square gives
//!
//! ```text
//! (1/lambda) int_0^inf dw exp(-w/lambda - (w + a)^2 / 4t)
//!     = sqrt(pi t)/lambda * exp(-a^2/4t) * erfcx(a/(2 sqrt t) + sqrt(t)/lambda)
//! ```
//!
//! which stays finite for all `t, lambda > 0` where the raw integrand
//! underflows or overflows.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::special_fn::{erfcx_unchecked, SQRT_PI};

/// Physical parameters of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Coupling length; zero is the free theory.
    pub lambda: f64,
    /// Renormalization mass scale.
    pub kappa: f64,
    /// Infrared cutoff mass.
    pub epsilon: f64,
}

impl ModelParams {
    pub fn new(lambda: f64, kappa: f64, epsilon: f64) -> Result<Self> {
        let params = Self {
            lambda,
            kappa,
            epsilon,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(domain("ModelParams", format!("lambda = {} must be >= 0", self.lambda)));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(domain("ModelParams", format!("kappa = {} must be > 0", self.kappa)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(domain("ModelParams", format!("epsilon = {} must be >= 0", self.epsilon)));
        }
        Ok(())
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        Self { epsilon, ..self }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    pub(crate) fn require_coupling(&self, function: &'static str) -> Result<()> {
        self.validate()?;
        if self.lambda == 0.0 {
            return Err(domain(function, "requires lambda > 0"));
        }
        Ok(())
    }
}

/// Radial data of a pair of points: `|x|`, `|y|` and `|x - y|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGeometry {
    r_x: f64,
    r_y: f64,
    separation: f64,
}

impl RadialGeometry {
    pub fn new(r_x: f64, r_y: f64, separation: f64) -> Result<Self> {
        if !(r_x > 0.0 && r_y > 0.0 && r_x.is_finite() && r_y.is_finite()) {
            return Err(domain("RadialGeometry", "radii must be finite and > 0"));
        }
        if !(separation >= 0.0 && separation.is_finite()) {
            return Err(domain("RadialGeometry", "separation must be finite and >= 0"));
        }
        let slack = 1e-12 * (r_x + r_y);
        if separation < (r_x - r_y).abs() - slack || separation > r_x + r_y + slack {
            return Err(domain(
                "RadialGeometry",
                format!("separation {separation} violates the triangle inequality for radii {r_x}, {r_y}"),
            ));
        }
        Ok(Self { r_x, r_y, separation })
    }

    /// Both points on the same ray at distance `r`.
    pub fn diagonal(r: f64) -> Result<Self> {
        Self::new(r, r, 0.0)
    }

    pub fn r_x(&self) -> f64 {
        self.r_x
    }

    pub fn r_y(&self) -> f64 {
        self.r_y
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// The same pair with the roles of the two points exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            r_x: self.r_y,
            r_y: self.r_x,
            separation: self.separation,
        }
    }
}

fn check_time(function: &'static str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(function, format!("t = {t} must be finite and > 0")))
    }
}

fn heat_prefactor(t: f64) -> f64 {
    (4.0 * PI * t).powf(-1.5)
}

/// Free heat kernel `exp(-eps^2 t) (4 pi t)^(-3/2) exp(-|x-y|^2 / 4t)`.
pub fn free_kernel(geom: &RadialGeometry, t: f64, p: &ModelParams) -> Result<f64> {
    check_time("free_kernel", t)?;
    p.validate()?;
    let core = heat_prefactor(t) * (-geom.separation * geom.separation / (4.0 * t)).exp();
    Ok((-p.epsilon * p.epsilon * t).exp() * core)
}

/// Closed form of `(1/lambda) int_0^inf dw exp(-(w/lambda + (w + a)^2/(4t)))`.
pub fn inner_w_integral(a: f64, t: f64, lambda: f64) -> Result<f64> {
    check_time("inner_w_integral", t)?;
    if !(a >= 0.0 && a.is_finite()) {
        return Err(domain("inner_w_integral", format!("a = {a} must be finite and >= 0")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain("inner_w_integral", format!("lambda = {lambda} must be > 0")));
    }
    Ok(inner_w_unchecked(a, t, lambda))
}

pub(crate) fn inner_w_unchecked(a: f64, t: f64, lambda: f64) -> f64 {
    let sqrt_t = t.sqrt();
    let gauss = (-a * a / (4.0 * t)).exp();
    if gauss == 0.0 {
        return 0.0;
    }
    SQRT_PI * sqrt_t / lambda * gauss * erfcx_unchecked(a / (2.0 * sqrt_t) + sqrt_t / lambda)
}

/// Full heat kernel `exp(-t A_eps)(x, y)`.
///
/// For `lambda = 0` this is exactly [`free_kernel`]. The cutoff factor is
/// applied last, so the result at `epsilon > 0` is bitwise the result at
/// `epsilon = 0` times `exp(-epsilon^2 t)`.
pub fn kernel(geom: &RadialGeometry, t: f64, p: &ModelParams) -> Result<f64> {
    check_time("kernel", t)?;
    p.validate()?;
    if p.lambda == 0.0 {
        return free_kernel(geom, t, p);
    }
    let sum = geom.r_x + geom.r_y;
    let product = geom.r_x * geom.r_y;
    let bracket = (-sum * sum / (4.0 * t)).exp() - inner_w_unchecked(sum, t, p.lambda);
    let core = heat_prefactor(t)
        * ((-geom.separation * geom.separation / (4.0 * t)).exp() + 2.0 * t / product * bracket);
    Ok((-p.epsilon * p.epsilon * t).exp() * core)
}

/// Diagonal kernel minus its free part, at `|x| = |y| = r`, `x = y`.
///
/// ```text
/// exp(-eps^2 t) (4 pi t)^(-3/2) (2t/r^2) exp(-r^2/t)
///     [1 - sqrt(pi t)/lambda erfcx(r/sqrt t + sqrt(t)/lambda)]
/// ```
///
/// The bracket is positive for every `r, t, lambda > 0`, since
/// `erfcx(z) < 1/(sqrt(pi) z)`.
pub fn diagonal_relative(r: f64, t: f64, p: &ModelParams) -> Result<f64> {
    check_time("diagonal_relative", t)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain("diagonal_relative", format!("r = {r} must be finite and > 0")));
    }
    p.require_coupling("diagonal_relative")?;
    let sqrt_t = t.sqrt();
    let gauss = (-r * r / t).exp();
    let bracket = 1.0 - SQRT_PI * sqrt_t / p.lambda * erfcx_unchecked(r / sqrt_t + sqrt_t / p.lambda);
    Ok((-p.epsilon * p.epsilon * t).exp() * heat_prefactor(t) * (2.0 * t / (r * r)) * gauss * bracket)
}
