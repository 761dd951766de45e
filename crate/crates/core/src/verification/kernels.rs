//! Closed-form fundamental solutions used as references.

use crate::error::VerifyError;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// Heat kernel, order two.
    Gauss,
    /// Cauchy density, the order-one limit with zero skewness.
    Cauchy,
}

/// Unit-mass solution from a point source at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticKernel<T> {
    pub kind: KernelKind,
    pub k_alpha: T,
}

impl<T: Real> AnalyticKernel<T> {
    pub fn gauss(k_alpha: T) -> Self {
        Self {
            kind: KernelKind::Gauss,
            k_alpha,
        }
    }

    pub fn cauchy(k_alpha: T) -> Self {
        Self {
            kind: KernelKind::Cauchy,
            k_alpha,
        }
    }

    /// Same as [`kernel_eval`] without the time check; `t` must be positive.
    pub fn value(&self, x: T, t: T) -> T {
        let kt = self.k_alpha * t;
        match self.kind {
            KernelKind::Gauss => {
                let four_kt = T::lit(4.0) * kt;
                (T::PI() * four_kt).sqrt().recip() * (-(x * x) / four_kt).exp()
            }
            KernelKind::Cauchy => kt / (T::PI() * (kt * kt + x * x)),
        }
    }
}

/// `(4πKt)^{-1/2} exp(-x²/(4Kt))` or `(1/π) Kt / ((Kt)² + x²)`.
pub fn kernel_eval<T: Real>(kernel: &AnalyticKernel<T>, x: T, t: T) -> Result<T, VerifyError> {
    if !(t > T::zero()) {
        return Err(VerifyError::NonpositiveTime(t.to_f64_lossy()));
    }
    Ok(kernel.value(x, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn point_values() {
        let c = AnalyticKernel::cauchy(1.0);
        assert_abs_diff_eq!(
            kernel_eval(&c, 0.0, 1.0).unwrap(),
            1.0 / PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            kernel_eval(&c, 1.0, 1.0).unwrap(),
            0.5 / PI,
            epsilon = 1e-15
        );
        let g = AnalyticKernel::gauss(1.0);
        assert_abs_diff_eq!(
            kernel_eval(&g, 0.0, 1.0).unwrap(),
            0.282_094_791_773_878_1,
            epsilon = 1e-15
        );
        assert!(matches!(
            kernel_eval(&g, 0.0, 0.0),
            Err(VerifyError::NonpositiveTime(_))
        ));
    }

    fn trapezoid(f: impl Fn(f64) -> f64) -> f64 {
        let (a, h, n) = (-40.0, 0.01, 8000);
        let inner: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
        h * (inner + 0.5 * (f(a) + f(a + n as f64 * h)))
    }

    #[test]
    fn unit_mass() {
        let g = AnalyticKernel::gauss(1.0);
        assert!((trapezoid(|x| g.value(x, 1.0)) - 1.0).abs() <= 1e-4);
        let c = AnalyticKernel::cauchy(1.0);
        assert!((trapezoid(|x| c.value(x, 1.0)) - 1.0).abs() <= 2e-2);
    }
}
