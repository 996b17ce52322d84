//! Residue and regular part at `u = 0` of a function with at most a simple
//! pole there.
//!
//! For `f(u) = f_{-1}/u + f_0 + f_1 u + ...` the symmetric combinations
//!
//! ```text
//! S(h) = (f(h) + f(-h)) / 2   = f_0    + f_2 h^2 + f_4 h^4 + ...
//! D(h) = h (f(h) - f(-h)) / 2 = f_{-1} + f_1 h^2 + f_3 h^4 + ...
//! ```
//!
//! cancel the pole identically and are even in `h`, so both are
//! Richardson-extrapolated in `h^2` over the stencil `h, h/2, h/4, ...`.

use crate::error::{domain, Result};

/// Stencil configuration around `u = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regulator {
    pub stencil_h: f64,
    pub richardson_levels: usize,
}

impl Default for Regulator {
    fn default() -> Self {
        Self {
            stencil_h: 1e-2,
            richardson_levels: 3,
        }
    }
}

impl Regulator {
    pub fn new(stencil_h: f64, richardson_levels: usize) -> Result<Self> {
        let reg = Self {
            stencil_h,
            richardson_levels,
        };
        reg.validate()?;
        Ok(reg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.stencil_h > 0.0 && self.stencil_h <= 0.1) {
            return Err(domain(
                "Regulator",
                format!("stencil_h = {} must lie in (0, 0.1]", self.stencil_h),
            ));
        }
        if self.richardson_levels < 1 {
            return Err(domain("Regulator", "richardson_levels must be >= 1"));
        }
        Ok(())
    }

    /// Stencil offsets `h, h/2, h/4, ...`.
    pub fn offsets(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.richardson_levels).map(move |k| self.stencil_h / (1u64 << k) as f64)
    }
}

/// Extracted Laurent coefficients with error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentEstimate {
    pub residue: f64,
    pub regular_part: f64,
    pub residue_error: f64,
    pub regular_error: f64,
    /// False when the extrapolation increments stopped shrinking.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Extrapolated {
    value: f64,
    error: f64,
    converged: bool,
}

/// Richardson table in h^2 for stencils halving at each level. The error is
/// the last change along the diagonal of the table.
fn richardson(samples: &[f64]) -> Extrapolated {
    let n = samples.len();
    let mut row = samples.to_vec();
    let mut diagonal = vec![samples[0]];
    let mut factor = 1.0;
    for level in 1..n {
        factor *= 4.0;
        row = (0..n - level)
            .map(|i| row[i + 1] + (row[i + 1] - row[i]) / (factor - 1.0))
            .collect();
        diagonal.push(row[0]);
    }
    let increments: Vec<f64> = diagonal.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let floor = 64.0 * f64::EPSILON * samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let converged = match increments.as_slice() {
        [.., before, last] => last < before || *last <= floor,
        _ => true,
    };
    Extrapolated {
        value: diagonal[n - 1],
        error: increments.last().copied().unwrap_or(0.0).max(floor),
        converged,
    }
}

/// Regular part and residue of `f` at `u = 0`.
pub fn regular_part<F>(f: F, reg: &Regulator) -> Result<LaurentEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    reg.validate()?;
    let mut even = Vec::with_capacity(reg.richardson_levels);
    let mut odd = Vec::with_capacity(reg.richardson_levels);
    for h in reg.offsets() {
        let plus = f(h)?;
        let minus = f(-h)?;
        even.push(0.5 * (plus + minus));
        odd.push(0.5 * h * (plus - minus));
    }
    let regular = richardson(&even);
    let residue = richardson(&odd);
    Ok(LaurentEstimate {
        residue: residue.value,
        regular_part: regular.value,
        residue_error: residue.error,
        regular_error: regular.error,
        converged: regular.converged && residue.converged,
    })
}

/// Same as [`regular_part`], with the stencil evaluations run in parallel.
pub fn regular_part_parallel<F>(f: F, reg: &Regulator) -> Result<LaurentEstimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    reg.validate()?;
    let points: Vec<f64> = reg.offsets().flat_map(|h| [h, -h]).collect();
    let values = points.par_iter().map(|&u| f(u)).collect::<Result<Vec<f64>>>()?;
    let table: Vec<(f64, f64)> = values.chunks(2).map(|pair| (pair[0], pair[1])).collect();
    regular_part(
        |u| {
            let k = reg.offsets().position(|h| h == u.abs()).expect("stencil point");
            Ok(if u > 0.0 { table[k].0 } else { table[k].1 })
        },
        reg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn extract(f: impl Fn(f64) -> f64) -> LaurentEstimate {
        regular_part(|u| Ok(f(u)), &Regulator::default()).unwrap()
    }

    #[test]
    fn pole_plus_constant() {
        let e = extract(|u| 1.0 / u + 7.0);
        assert!((e.residue - 1.0).abs() < 1e-12);
        assert!((e.regular_part - 7.0).abs() < 1e-12);
        assert!(e.converged);
    }

    #[test]
    fn pole_plus_exponential() {
        let e = extract(|u| 1.0 / u + u.exp());
        assert!((e.residue - 1.0).abs() < 1e-10);
        assert!((e.regular_part - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cosine_over_u() {
        let e = extract(|u| u.cos() / u);
        assert!((e.residue - 1.0).abs() < 1e-10);
        assert!(e.regular_part.abs() < 1e-10);
    }

    #[test]
    fn one_level_removes_quadratic() {
        let (a, b, c, d) = (2.5, -1.25, 0.75, 3.0);
        let f = |u: f64| a / u + b + c * u + d * u * u;
        let plain = regular_part(|u| Ok(f(u)), &Regulator::new(1e-2, 1).unwrap()).unwrap();
        assert!((plain.regular_part - (b + d * 1e-4)).abs() < 1e-13);
        let two = regular_part(|u| Ok(f(u)), &Regulator::new(1e-2, 2).unwrap()).unwrap();
        assert!((two.regular_part - b).abs() < 1e-13);
        assert!((two.residue - a).abs() < 1e-13);
    }

    #[test]
    fn stencil_invariance() {
        let f = |u: f64| Ok((2.0 * u).exp() / u + (u + 0.5).ln());
        let wide = regular_part(f, &Regulator::new(2e-2, 3).unwrap()).unwrap();
        let narrow = regular_part(f, &Regulator::new(1e-2, 3).unwrap()).unwrap();
        let gap = (wide.regular_part - narrow.regular_part).abs();
        assert!(gap < 10.0 * wide.regular_error.max(narrow.regular_error));
        // exact: f_0 = 2 + ln(0.5)
        assert!((narrow.regular_part - (2.0 + 0.5f64.ln())).abs() < 1e-10);
    }

    #[test]
    fn parallel_matches_serial() {
        let f = |u: f64| Ok(3.0 / u + (u * 0.3).sin() + 1.5);
        let reg = Regulator::default();
        assert_eq!(regular_part(f, &reg).unwrap(), regular_part_parallel(f, &reg).unwrap());
    }

    #[test]
    fn errors() {
        assert!(Regulator::new(0.2, 3).is_err());
        assert!(Regulator::new(0.0, 3).is_err());
        assert!(Regulator::new(0.01, 0).is_err());
        let failing = regular_part(
            |u| if u < 0.0 { Err(domain("test", "boom")) } else { Ok(u) },
            &Regulator::default(),
        );
        assert!(failing.is_err());
    }

    #[test]
    fn growing_increments_are_flagged() {
        // A double pole is outside the model; the table diverges.
        let e = extract(|u| 1.0 / (u * u));
        assert!(!e.converged);
    }

    proptest! {
        #[test]
        fn linear_in_f(a in -5.0f64..5.0, b in -5.0f64..5.0, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
            let f = move |u: f64| a / u + (u + 1.0).exp();
            let g = move |u: f64| b / u + (2.0 * u).cos();
            let ef = extract(f);
            let eg = extract(g);
            let combo = extract(|u| alpha * f(u) + beta * g(u));
            let expect = alpha * ef.regular_part + beta * eg.regular_part;
            prop_assert!((combo.regular_part - expect).abs() < 1e-11);
        }
    }
}
