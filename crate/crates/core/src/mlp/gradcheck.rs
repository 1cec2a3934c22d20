//! Finite-difference validation of the analytic gradient.

use super::{Gradients, Mlp, MlpError};

/// Central-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Gradients smaller than this are compared on an absolute scale.
const RELATIVE_FLOOR: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientCheck {
    /// max |a − n| / max(|a|, |n|, 1e-5) over all parameters.
    pub max_relative_error: f64,
    pub max_abs_analytic: f64,
    pub max_abs_numeric: f64,
}

/// Compares `analytic` against central differences of the sample loss.
pub fn compare_gradients(net: &Mlp, x: &[f64], label: usize, analytic: &Gradients) -> Result<GradientCheck, MlpError> {
    net.loss(x, label)?;
    if analytic.0.len() != net.parameters().len() {
        return Err(MlpError::DimensionMismatch { expected: net.parameters().len(), actual: analytic.0.len() });
    }
    let mut probe = net.clone();
    let mut report = GradientCheck { max_relative_error: 0.0, max_abs_analytic: 0.0, max_abs_numeric: 0.0 };
    for (i, &a) in analytic.0.iter().enumerate() {
        let original = probe.parameters()[i];
        probe.parameters_mut()[i] = original + FD_STEP;
        let plus = probe.loss(x, label)?;
        probe.parameters_mut()[i] = original - FD_STEP;
        let minus = probe.loss(x, label)?;
        probe.parameters_mut()[i] = original;

        let n = (plus - minus) / (2.0 * FD_STEP);
        let rel = (a - n).abs() / a.abs().max(n.abs()).max(RELATIVE_FLOOR);
        report.max_relative_error = report.max_relative_error.max(rel);
        report.max_abs_analytic = report.max_abs_analytic.max(a.abs());
        report.max_abs_numeric = report.max_abs_numeric.max(n.abs());
    }
    Ok(report)
}

/// Checks [`Mlp::backprop`] against central differences on one sample.
pub fn gradient_check(net: &Mlp, x: &[f64], label: usize) -> Result<GradientCheck, MlpError> {
    let analytic = net.backprop(x, label)?;
    compare_gradients(net, x, label, &analytic)
}
