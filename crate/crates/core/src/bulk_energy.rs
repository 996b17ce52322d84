//! Relative bulk Casimir energy: the defining Mellin representation, its
//! continuation through integration by parts in `tau = sqrt(t)/lambda`, the
//! residue and regular part at `u = 0`, the infrared limit, and the closed
//! renormalized value.

use std::cell::RefCell;
use std::f64::consts::{E, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::heat_kernel::ModelParams;
use crate::laurent::{regular_part, LaurentEstimate, Regulator};
use crate::quadrature::{integrate_semi_infinite, QuadratureSpec};
use crate::special_fn::{
    erf_unchecked, erfcx_with_derivatives, g_derivatives_unchecked, gamma_unchecked, EULER_GAMMA,
    SQRT_PI,
};
use crate::Estimate;

/// Parameters of the partition-function vacuum energy `2 alpha (1 - ln(4 pi alpha ell))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SZParams {
    pub alpha: f64,
    pub ell: f64,
}

impl SZParams {
    /// `alpha = 1/(4 pi lambda)`, `ell = e/kappa`.
    pub fn from_model(p: &ModelParams) -> Result<Self> {
        p.require_coupling("SZParams::from_model")?;
        Ok(Self {
            alpha: 1.0 / (4.0 * PI * p.lambda),
            ell: E / p.kappa,
        })
    }
}

/// Which representation produced an energy value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Defining,
    Continued,
    Renormalized,
}

impl Representation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Representation::Defining => "defining",
            Representation::Continued => "continued",
            Representation::Renormalized => "renormalized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord {
    pub params: ModelParams,
    pub u: f64,
    pub representation: Representation,
    pub value: f64,
    pub error_estimate: f64,
}

/// Runs an integrand that may fail, turning the first failure into the
/// returned error instead of a NaN abscissa report.
struct Fallible {
    failure: RefCell<Option<Error>>,
}

impl Fallible {
    fn new() -> Self {
        Self {
            failure: RefCell::new(None),
        }
    }

    fn wrap(&self, value: Result<f64>) -> f64 {
        match value {
            Ok(v) => v,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn finish<T>(self, outcome: Result<T>) -> Result<T> {
        match self.failure.into_inner() {
            Some(e) => Err(e),
            None => outcome,
        }
    }
}

/// `R(t) = int_0^inf dr [exp(-r^2/t) - inner_w(2r, t, lambda)]` with the
/// r-integral done analytically:
///
/// ```text
/// R(t) = sqrt(pi t)/2 * int_0^inf dv exp(-v) erf(lambda v / (2 sqrt t))
/// ```
///
/// The remaining v-integral is done by quadrature.
pub fn radial_bracket_integral(t: f64, lambda: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    if !(t > 0.0 && lambda > 0.0) {
        return Err(domain("radial_bracket_integral", "need t > 0 and lambda > 0"));
    }
    let scale = lambda / (2.0 * t.sqrt());
    let spec = quad.with_hint(1.0).with_split((1.0 / scale).min(1.0));
    let r = integrate_semi_infinite(|v| (-v).exp() * erf_unchecked(scale * v), &spec)?;
    let pre = 0.5 * (PI * t).sqrt();
    Ok(Estimate {
        value: pre * r.value,
        error: pre * r.error_estimate,
    })
}

/// Relative bulk energy from the defining double integral over `(r, t)`,
/// valid for `u > 1`.
pub fn delta_e_defining(u: f64, p: &ModelParams, quad: &QuadratureSpec) -> Result<Estimate> {
    if !(u > 1.0 && u.is_finite()) {
        return Err(domain("delta_e_defining", format!("u = {u} must exceed 1")));
    }
    p.require_coupling("delta_e_defining")?;
    if p.epsilon <= 0.0 {
        return Err(domain("delta_e_defining", "requires epsilon > 0"));
    }
    let inner = quad.with_rel_tol(quad.rel_tol * 1e-2).with_abs_tol(1e-300);
    let eps2 = p.epsilon * p.epsilon;
    let lambda = p.lambda;
    let guard = Fallible::new();
    let outcome = integrate_semi_infinite(
        |t| {
            let cutoff = (-eps2 * t).exp();
            if cutoff == 0.0 {
                return 0.0;
            }
            let radial = guard.wrap(radial_bracket_integral(t, lambda, &inner).map(|e| e.value));
            t.powf(0.5 * u - 2.0) * cutoff * radial
        },
        &quad.with_hint(0.5 * (u - 1.0)).with_split(lambda * lambda),
    );
    let r = guard.finish(outcome)?;
    let pre = p.kappa.powf(u) / ((4.0 * PI).sqrt() * gamma_unchecked(0.5 * (u - 1.0)));
    Ok(Estimate {
        value: pre * r.value,
        error: (pre * r.error_estimate).abs() + (pre * r.value).abs() * inner.rel_tol,
    })
}

/// `int_0^inf dtau tau^u h''(tau)` with `h = exp(-beta^2 tau^2) erfcx(tau)`.
pub fn continued_integral(u: f64, beta: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    if u.is_nan() || u <= -1.0 {
        return Err(domain("continued_integral", format!("u = {u} must exceed -1")));
    }
    if beta == 0.0 && u >= 2.0 {
        return Err(domain(
            "continued_integral",
            format!("tau^u h'' decays like tau^(u-3); u = {u} diverges without a cutoff"),
        ));
    }
    let r = integrate_semi_infinite(
        |tau| {
            let d2h = g_derivatives_unchecked(tau, beta).d2h;
            if d2h == 0.0 {
                0.0
            } else {
                tau.powf(u) * d2h
            }
        },
        &quad.with_hint(u + 1.0).with_split(1.0),
    )?;
    Ok(Estimate {
        value: r.value,
        error: r.error_estimate,
    })
}

/// Prefactor `(lambda kappa)^u / (4 lambda u Gamma((u+1)/2))` of the continued form.
fn continued_prefactor(u: f64, p: &ModelParams) -> f64 {
    (p.lambda * p.kappa).powf(u) / (4.0 * p.lambda * u * gamma_unchecked(0.5 * (u + 1.0)))
}

/// Analytically continued relative bulk energy, meromorphic on `u > -1`
/// with a simple pole at `u = 0`.
pub fn delta_e_continued(u: f64, p: &ModelParams, quad: &QuadratureSpec) -> Result<Estimate> {
    p.require_coupling("delta_e_continued")?;
    if u == 0.0 {
        return Err(Error::Pole {
            function: "delta_e_continued",
            at: 0.0,
        });
    }
    if !(u > -1.0 && u.is_finite()) {
        return Err(domain("delta_e_continued", format!("u = {u} must exceed -1")));
    }
    let integral = continued_integral(u, p.epsilon * p.lambda, quad)?;
    let pre = continued_prefactor(u, p);
    Ok(Estimate {
        value: pre * integral.value,
        error: (pre * integral.error).abs(),
    })
}

/// Residue of the continued energy at `u = 0`: `int h'' = -h'(0) = 2/sqrt(pi)`
/// times `1/(4 lambda sqrt(pi))`, i.e. `1/(2 pi lambda)` for every epsilon.
pub fn residue_at_zero(p: &ModelParams) -> Result<f64> {
    p.require_coupling("residue_at_zero")?;
    Ok(1.0 / (2.0 * PI * p.lambda))
}

/// Both channels of the renormalized bulk energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenormalizedBulk {
    /// `ln(kappa lambda) / (2 pi lambda)`; the canonical value.
    pub closed_form: f64,
    /// Quadrature of `(1/lambda) int (gamma + 2 ln(2 kappa lambda tau))/(8 sqrt(pi)) g''`.
    pub numeric: f64,
    pub numeric_error: f64,
    pub difference: f64,
}

impl RenormalizedBulk {
    pub fn value(&self) -> f64 {
        self.closed_form
    }
}

pub fn closed_form_renormalized(p: &ModelParams) -> Result<f64> {
    p.require_coupling("closed_form_renormalized")?;
    Ok((p.kappa * p.lambda).ln() / (2.0 * PI * p.lambda))
}

pub fn delta_e_renormalized(p: &ModelParams, quad: &QuadratureSpec) -> Result<RenormalizedBulk> {
    let closed_form = closed_form_renormalized(p)?;
    // Split into two nonvanishing integrals; their combination cancels
    // exactly at kappa lambda = 1.
    let spec = quad.with_hint(0.5).with_split(1.0);
    let mass = integrate_semi_infinite(|tau| erfcx_with_derivatives(tau).2, &spec)?;
    let log_moment = integrate_semi_infinite(|tau| tau.ln() * erfcx_with_derivatives(tau).2, &spec)?;
    let shift = EULER_GAMMA + 2.0 * (2.0 * p.kappa * p.lambda).ln();
    let pre = 1.0 / (8.0 * SQRT_PI * p.lambda);
    let numeric = pre * (shift * mass.value + 2.0 * log_moment.value);
    let numeric_error = pre * (shift.abs() * mass.error_estimate + 2.0 * log_moment.error_estimate);
    Ok(RenormalizedBulk {
        closed_form,
        numeric,
        numeric_error,
        difference: numeric - closed_form,
    })
}

/// Regular part at `u = 0` of the continued energy at the cutoff in `p`.
pub fn regular_part_at(p: &ModelParams, reg: &Regulator, quad: &QuadratureSpec) -> Result<LaurentEstimate> {
    p.require_coupling("regular_part_at")?;
    regular_part(|u| delta_e_continued(u, p, quad).map(|e| e.value), reg)
}

/// Basis used to extrapolate the regular part to `epsilon -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtrapolationModel {
    /// `a + b eps^2 + c eps^4`.
    EvenPolynomial,
    /// `a + b eps^2 + c eps^2 ln(eps)`.
    EvenWithLog,
    /// Subtract the known `beta^2` and `beta^4` terms of the small-cutoff
    /// expansion (see [`regular_part_cutoff_shift`]), then fit
    /// `a + b eps^6 ln(eps) + c eps^6` to what is left.
    #[default]
    SubtractedAsymptotics,
}

impl ExtrapolationModel {
    fn basis(&self, eps: f64) -> [f64; 3] {
        let e2 = eps * eps;
        let log = if eps == 0.0 { 0.0 } else { eps.ln() };
        match self {
            ExtrapolationModel::EvenPolynomial => [1.0, e2, e2 * e2],
            ExtrapolationModel::EvenWithLog => [1.0, e2, e2 * log],
            ExtrapolationModel::SubtractedAsymptotics => {
                let e6 = e2 * e2 * e2;
                [1.0, e6 * log, e6]
            }
        }
    }
}

/// Leading terms of `RP(eps) - RP(0)` for small `beta = eps lambda`.
///
/// Only `int ln(tau) h'' dtau` depends on the cutoff, and two integrations
/// by parts turn its shift into `int (1 - exp(-beta^2 tau^2)) erfcx(tau) / tau^2`.
/// Its Mellin-Barnes form has double poles at `-2, -4, ...`, giving
///
/// ```text
/// RP(eps) - RP(0) = [beta^2 (1/2 + ln 2 - ln beta) + beta^4/4 (ln 2 - 1/4 - ln beta)] / (4 pi lambda)
///                   + O(beta^6 ln beta)
/// ```
pub fn regular_part_cutoff_shift(p: &ModelParams) -> Result<f64> {
    p.require_coupling("regular_part_cutoff_shift")?;
    let beta = p.epsilon * p.lambda;
    if beta == 0.0 {
        return Ok(0.0);
    }
    let (b2, lb) = (beta * beta, beta.ln());
    let series = b2 * (0.5 + LN_2 - lb) + 0.25 * b2 * b2 * (LN_2 - 0.25 - lb);
    Ok(series / (4.0 * PI * p.lambda))
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        *slot = det(mc) / d;
    }
    Some(out)
}

/// Value at `eps = 0` of the model through the given points (at most the
/// last three are used; fewer points fall back to a constant or a line in eps^2).
pub fn extrapolate_to_zero(points: &[(f64, f64)], model: ExtrapolationModel) -> Result<f64> {
    match points {
        [] => Err(Error::Extrapolation("no points".into())),
        [(_, y)] => Ok(*y),
        [(e1, y1), (e2, y2)] => {
            let (x1, x2) = (e1 * e1, e2 * e2);
            if x1 == x2 {
                return Err(Error::Extrapolation("repeated cutoff".into()));
            }
            Ok((y2 * x1 - y1 * x2) / (x1 - x2))
        }
        _ => {
            let tail = &points[points.len() - 3..];
            let mut m = [[0.0; 3]; 3];
            let mut rhs = [0.0; 3];
            for (row, (eps, y)) in tail.iter().enumerate() {
                m[row] = model.basis(*eps);
                rhs[row] = *y;
            }
            solve3(m, rhs)
                .map(|c| c[0])
                .ok_or_else(|| Error::Extrapolation("singular extrapolation system".into()))
        }
    }
}

/// Everything the renormalization pipeline computes.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineResult {
    /// Regular part at each cutoff in the sequence.
    pub regular_parts: Vec<(f64, LaurentEstimate)>,
    /// RP first, then `epsilon -> 0` by extrapolation.
    pub extrapolated: f64,
    /// Change of the extrapolated value when the smallest cutoff is dropped.
    pub extrapolation_error: f64,
    /// RP evaluated directly at `epsilon = 0`.
    pub direct: LaurentEstimate,
    pub closed_form: f64,
    pub converged: bool,
}

impl PipelineResult {
    pub fn order_gap(&self) -> f64 {
        (self.extrapolated - self.direct.regular_part).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub regulator: Regulator,
    pub quadrature: QuadratureSpec,
    pub model: ExtrapolationModel,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            regulator: Regulator::default(),
            quadrature: QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-300),
            model: ExtrapolationModel::default(),
        }
    }
}

/// Regular part at `u = 0` for each cutoff, then the limit `epsilon -> 0`.
pub fn renormalization_pipeline(
    p: &ModelParams,
    eps_sequence: &[f64],
    options: &PipelineOptions,
) -> Result<PipelineResult> {
    p.require_coupling("renormalization_pipeline")?;
    if eps_sequence.is_empty() {
        return Err(domain("renormalization_pipeline", "empty cutoff sequence"));
    }
    if eps_sequence.iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
        return Err(domain("renormalization_pipeline", "cutoffs must be finite and >= 0"));
    }
    if eps_sequence.windows(2).any(|w| w[1] >= w[0]) {
        return Err(domain("renormalization_pipeline", "cutoffs must strictly decrease"));
    }
    use rayon::prelude::*;
    let regular_parts = eps_sequence
        .par_iter()
        .map(|&eps| {
            regular_part_at(&p.with_epsilon(eps), &options.regulator, &options.quadrature).map(|e| (eps, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let points = regular_parts
        .iter()
        .map(|(eps, l)| {
            let shift = match options.model {
                ExtrapolationModel::SubtractedAsymptotics => regular_part_cutoff_shift(&p.with_epsilon(*eps))?,
                _ => 0.0,
            };
            Ok((*eps, l.regular_part - shift))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let extrapolated = extrapolate_to_zero(&points, options.model)?;
    let extrapolation_error = if points.len() > 3 {
        (extrapolated - extrapolate_to_zero(&points[..points.len() - 1], options.model)?).abs()
    } else if points.len() > 1 {
        (extrapolated - extrapolate_to_zero(&points[1..], options.model)?).abs()
    } else {
        0.0
    };
    let direct = regular_part_at(&p.with_epsilon(0.0), &options.regulator, &options.quadrature)?;
    let converged = extrapolated.is_finite()
        && direct.converged
        && regular_parts.iter().all(|(_, l)| l.converged);
    Ok(PipelineResult {
        regular_parts,
        extrapolated,
        extrapolation_error,
        direct,
        closed_form: closed_form_renormalized(p)?,
        converged,
    })
}

/// `2 alpha (1 - ln(4 pi alpha ell))`.
pub fn vacuum_energy_sz(sz: &SZParams) -> Result<f64> {
    if !(sz.alpha > 0.0 && sz.ell > 0.0 && sz.alpha.is_finite() && sz.ell.is_finite()) {
        return Err(domain("vacuum_energy_sz", "alpha and ell must be finite and > 0"));
    }
    Ok(2.0 * sz.alpha * (1.0 - (4.0 * PI * sz.alpha * sz.ell).ln()))
}
