//! Closed-form discretization data for the Riesz-Feller operator.
//!
//! The operator of order `0 < α <= 2` and skewness `θ` is approximated at node `i` by
//!
//! ```text
//! D u_i ≈ h^{-α} Σ_k w_k u_{i+k}
//! ```
//!
//! where the weights `w_k` blend one-sided and central integer-order stencils inside the
//! fractional kernel. Two formula families exist, one for `0 < α < 1` (first-derivative
//! stencils blended by `λ1 = α - |θ|`) and one for `1 < α <= 2` (second-derivative stencils
//! blended by `λ2 = 2 - α - |θ|`). Sums of the weights beyond a finite window have closed
//! forms too ([`TailSums`]); they carry Dirichlet data into interior nodes.

use crate::error::{KernelError, ParamError};
use crate::scalar::{gamma, pow0, Real};

/// Default half-width of the excluded band around `α = 1`.
pub const DEFAULT_ALPHA_ONE_GUARD: f64 = 1e-6;

/// Which closed-form family applies to a given order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `0 < α < 1`, first-derivative stencils.
    BelowOne,
    /// `1 < α <= 2`, second-derivative stencils.
    AboveOne,
}

/// Validated operator order and skewness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalParams<T> {
    alpha: T,
    theta: T,
    alpha_one_guard: T,
}

impl<T: Real> FractionalParams<T> {
    pub fn new(alpha: T, theta: T) -> Result<Self, ParamError> {
        Self::with_guard(alpha, theta, T::lit(DEFAULT_ALPHA_ONE_GUARD))
    }

    pub fn with_guard(alpha: T, theta: T, alpha_one_guard: T) -> Result<Self, ParamError> {
        let guard_f = alpha_one_guard.to_f64_lossy();
        if !(alpha_one_guard >= T::zero()) || !alpha_one_guard.is_finite() {
            return Err(ParamError::InvalidGuard(guard_f));
        }
        if !(alpha > T::zero() && alpha <= T::lit(2.0)) {
            return Err(ParamError::OutOfRangeAlpha(alpha.to_f64_lossy()));
        }
        if (alpha - T::one()).abs() < alpha_one_guard || alpha == T::one() {
            return Err(ParamError::AlphaNearOne {
                alpha: alpha.to_f64_lossy(),
                guard: guard_f,
            });
        }
        let limit = alpha.min(T::lit(2.0) - alpha);
        // `2 - α` is rounded, so admit the edge case |θ| = 2 - α as written by the caller
        let slack = T::lit(8.0) * T::epsilon();
        if !(theta.abs() <= limit + slack) {
            return Err(ParamError::SkewnessTooLarge {
                theta_abs: theta.abs().to_f64_lossy(),
                limit: limit.to_f64_lossy(),
            });
        }
        Ok(Self {
            alpha,
            theta,
            alpha_one_guard,
        })
    }

    #[inline]
    pub fn alpha(&self) -> T {
        self.alpha
    }

    #[inline]
    pub fn theta(&self) -> T {
        self.theta
    }

    #[inline]
    pub fn alpha_one_guard(&self) -> T {
        self.alpha_one_guard
    }

    #[inline]
    pub fn branch(&self) -> Branch {
        if self.alpha < T::one() {
            Branch::BelowOne
        } else {
            Branch::AboveOne
        }
    }

    /// True for `α = 2` (which forces `θ = 0`), the classical second derivative.
    #[inline]
    pub fn is_order_two(&self) -> bool {
        self.alpha == T::lit(2.0)
    }

    pub fn coefficients(&self) -> RfCoefficients<T> {
        rf_coefficients(self)
    }
}

/// Checks `0 < α <= 2`, `α` outside the guard band around one, and `|θ| <= min(α, 2 - α)`.
pub fn validate_params<T: Real>(alpha: T, theta: T) -> Result<FractionalParams<T>, ParamError> {
    FractionalParams::new(alpha, theta)
}

/// Left/right splitting coefficients and the stencil blend parameter of the active branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfCoefficients<T> {
    pub c_left: T,
    pub c_right: T,
    /// `α - |θ|`, present for `0 < α < 1`.
    pub lambda1: Option<T>,
    /// `2 - (α + |θ|)`, present for `1 < α <= 2`.
    pub lambda2: Option<T>,
}

impl<T: Real> RfCoefficients<T> {
    /// Blend parameter of whichever branch is active.
    pub fn lambda(&self) -> T {
        self.lambda1
            .or(self.lambda2)
            .expect("exactly one blend parameter is always set")
    }
}

pub fn rf_coefficients<T: Real>(params: &FractionalParams<T>) -> RfCoefficients<T> {
    let alpha = params.alpha;
    let theta = params.theta;
    let half_pi = T::FRAC_PI_2();
    let (c_left, c_right) = if params.is_order_two() {
        // sin(απ) vanishes at α = 2; use the limit of the ratio
        (T::lit(-0.5), T::lit(-0.5))
    } else {
        let denom = (alpha * T::PI()).sin();
        (
            ((alpha - theta) * half_pi).sin() / denom,
            ((alpha + theta) * half_pi).sin() / denom,
        )
    };
    match params.branch() {
        Branch::BelowOne => RfCoefficients {
            c_left,
            c_right,
            lambda1: Some(alpha - theta.abs()),
            lambda2: None,
        },
        Branch::AboveOne => RfCoefficients {
            c_left,
            c_right,
            lambda1: None,
            // α + |θ| may round just above 2 at the admissible edge
            lambda2: Some((T::lit(2.0) - (alpha + theta.abs())).max(T::zero())),
        },
    }
}

/// `Σ c_a (m + a)^β` for coefficient lists with `Σ c_a = 0`.
///
/// Away from the origin each power is taken relative to `m^β` through `expm1`/`ln1p`, so the
/// leading `m^β` never has to cancel. This matters close to order one, where the `c_L, c_R`
/// factors are large and the far weights are many orders smaller than their terms.
fn shifted_powers<T: Real>(m: T, beta: T, terms: &[(T, T)]) -> T {
    if m < T::lit(3.0) {
        return terms
            .iter()
            .fold(T::zero(), |acc, &(a, c)| acc + c * pow0(m + a, beta));
    }
    let scale = m.powf(beta);
    let sum = terms.iter().fold(T::zero(), |acc, &(a, c)| {
        acc + c * (beta * (a / m).ln_1p()).exp_m1()
    });
    scale * sum
}

/// Far-field combination for `|k| >= 2`, `0 < α < 1`.
fn far_below_one<T: Real>(m: T, beta: T, lambda: T) -> T {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    shifted_powers(
        m,
        beta,
        &[
            (two, lambda),
            (T::one(), two - three * lambda),
            (T::zero(), three * lambda - T::lit(4.0)),
            (-T::one(), two - lambda),
        ],
    )
}

/// Far-field combination for `|k| >= 2`, `1 < α <= 2`.
fn far_above_one<T: Real>(m: T, beta: T, lambda: T) -> T {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let six = T::lit(6.0);
    shifted_powers(
        m,
        beta,
        &[
            (two, two - lambda),
            (T::one(), four * lambda - six),
            (T::zero(), six - six * lambda),
            (-T::one(), four * lambda - two),
            (-two, -lambda),
        ],
    )
}

/// Stencil weight `w_k(α, θ)`, dimensionless (scale by `h^{-α}` when applying).
pub fn weight<T: Real>(k: i64, params: &FractionalParams<T>) -> T {
    let coef = params.coefficients();
    let (c_l, c_r) = (coef.c_left, coef.c_right);
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let m = T::from_offset(k.abs());
    if params.is_order_two() {
        return match k.abs() {
            0 => -two,
            1 => T::one(),
            _ => T::zero(),
        };
    }
    match params.branch() {
        Branch::BelowOne => {
            let lambda = coef.lambda();
            let beta = T::one() - params.alpha;
            let pre = -T::one() / (two * gamma(two - params.alpha));
            let near = three.powf(beta) * lambda
                + two.powf(beta) * (two - three * lambda)
                + three * lambda
                - T::lit(4.0);
            pre * match k {
                k if k <= -2 => far_below_one(m, beta, lambda) * c_l,
                -1 => near * c_l + lambda * c_r,
                0 => (two.powf(beta) * lambda - three * lambda + two) * (c_l + c_r),
                1 => near * c_r + lambda * c_l,
                _ => far_below_one(m, beta, lambda) * c_r,
            }
        }
        Branch::AboveOne => {
            let lambda = coef.lambda();
            let beta = two - params.alpha;
            let pre = -T::one() / (two * gamma(three - params.alpha));
            let six = T::lit(6.0);
            let near = three.powf(beta) * (two - lambda)
                + two.powf(beta) * (T::lit(4.0) * lambda - six)
                - six * lambda
                + six;
            pre * match k {
                k if k <= -2 => far_above_one(m, beta, lambda) * c_l,
                -1 => near * c_l + (two - lambda) * c_r,
                0 => (two.powf(beta) * (two - lambda) + T::lit(4.0) * lambda - six) * (c_l + c_r),
                1 => near * c_r + (two - lambda) * c_l,
                _ => far_above_one(m, beta, lambda) * c_r,
            }
        }
    }
}

/// Weights `w_k` over a contiguous index window.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable<T> {
    params: FractionalParams<T>,
    k_min: i64,
    k_max: i64,
    weights: Vec<T>,
    // smallest window holding every non-zero weight; exact zeros outside it
    support: (i64, i64),
}

impl<T: Real> WeightTable<T> {
    pub fn new(params: FractionalParams<T>, k_min: i64, k_max: i64) -> Result<Self, KernelError> {
        if k_min > 0 || k_max < 0 {
            return Err(KernelError::InvalidWindow { k_min, k_max });
        }
        let weights: Vec<T> = (k_min..=k_max).map(|k| weight(k, &params)).collect();
        let first = weights.iter().position(|w| *w != T::zero());
        let last = weights.iter().rposition(|w| *w != T::zero());
        let support = match (first, last) {
            (Some(a), Some(b)) => (k_min + a as i64, k_min + b as i64),
            _ => (0, 0),
        };
        Ok(Self {
            params,
            k_min,
            k_max,
            weights,
            support,
        })
    }

    /// Symmetric window `-reach..=reach`.
    pub fn symmetric(params: FractionalParams<T>, reach: usize) -> Self {
        let r = reach as i64;
        Self::new(params, -r, r).expect("symmetric window contains zero")
    }

    pub fn params(&self) -> &FractionalParams<T> {
        &self.params
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Largest `r` with `-r..=r` inside the window.
    pub fn reach(&self) -> usize {
        self.k_min.unsigned_abs().min(self.k_max.unsigned_abs()) as usize
    }

    /// Index range outside of which every tabulated weight is exactly zero.
    pub fn support(&self) -> (i64, i64) {
        self.support
    }

    /// `w_k`, or `None` outside the window.
    #[inline]
    pub fn get(&self, k: i64) -> Option<T> {
        if k < self.k_min || k > self.k_max {
            None
        } else {
            Some(self.weights[(k - self.k_min) as usize])
        }
    }

    /// `w_k` for `k` known to lie in the window.
    #[inline]
    pub fn at(&self, k: i64) -> T {
        self.weights[(k - self.k_min) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        (self.k_min..=self.k_max).zip(self.weights.iter().copied())
    }
}

pub fn weight_table<T: Real>(
    params: &FractionalParams<T>,
    k_min: i64,
    k_max: i64,
) -> Result<WeightTable<T>, KernelError> {
    WeightTable::new(*params, k_min, k_max)
}

/// Cell integral of the fractional kernel, `h^{m-α}((k+1)^{m-α} - k^{m-α}) / Γ(m+1-α)`,
/// with `m = 1` below order one and `m = 2` above.
pub fn v_kernel<T: Real>(k: u64, params: &FractionalParams<T>, h: T) -> Result<T, KernelError> {
    if !(h > T::zero()) {
        return Err(KernelError::NonPositiveSpacing(h.to_f64_lossy()));
    }
    let m = match params.branch() {
        Branch::BelowOne => T::one(),
        Branch::AboveOne => T::lit(2.0),
    };
    let beta = m - params.alpha;
    let kk = T::from_u64(k).expect("index representable");
    Ok(h.powf(beta) * (pow0(kk + T::one(), beta) - pow0(kk, beta))
        / gamma(m + T::one() - params.alpha))
}

/// Branch-specific tail factor: `r̃_j` below order one, `r̈_j` above.
fn tail_factor<T: Real>(j: usize, params: &FractionalParams<T>, coef: &RfCoefficients<T>) -> T {
    let two = T::lit(2.0);
    let jj = T::from_index(j);
    let lambda = coef.lambda();
    match params.branch() {
        Branch::BelowOne => {
            let beta = T::one() - params.alpha;
            let terms = [
                (two, lambda),
                (T::one(), two - two * lambda),
                (T::zero(), lambda - two),
            ];
            shifted_powers(jj, beta, &terms) / (two * gamma(two - params.alpha))
        }
        Branch::AboveOne => {
            let beta = two - params.alpha;
            let three = T::lit(3.0);
            let terms = [
                (two, two - lambda),
                (T::one(), three * lambda - T::lit(4.0)),
                (T::zero(), two - three * lambda),
                (-T::one(), lambda),
            ];
            shifted_powers(jj, beta, &terms) / (two * gamma(three - params.alpha))
        }
    }
}

/// `s_L(j) = Σ_{k <= -j-1} w_k`.
pub fn tail_sum_left<T: Real>(j: usize, params: &FractionalParams<T>) -> Result<T, KernelError> {
    if j == 0 {
        return Err(KernelError::TailIndexZero);
    }
    let coef = params.coefficients();
    Ok(coef.c_left * tail_factor(j, params, &coef))
}

/// `s_R(j) = Σ_{k >= j+1} w_k`.
pub fn tail_sum_right<T: Real>(j: usize, params: &FractionalParams<T>) -> Result<T, KernelError> {
    if j == 0 {
        return Err(KernelError::TailIndexZero);
    }
    let coef = params.coefficients();
    Ok(coef.c_right * tail_factor(j, params, &coef))
}

/// Tail sums tabulated for `j = 1..=j_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailSums<T> {
    left: Vec<T>,
    right: Vec<T>,
}

impl<T: Real> TailSums<T> {
    pub fn new(params: &FractionalParams<T>, j_max: usize) -> Self {
        let coef = params.coefficients();
        let (left, right) = (1..=j_max)
            .map(|j| {
                let r = tail_factor(j, params, &coef);
                (coef.c_left * r, coef.c_right * r)
            })
            .unzip();
        Self { left, right }
    }

    pub fn j_max(&self) -> usize {
        self.left.len()
    }

    /// `s_L(j)`; panics for `j = 0` or `j > j_max`.
    #[inline]
    pub fn left(&self, j: usize) -> T {
        assert!(j >= 1, "tail sums are defined for j >= 1");
        self.left[j - 1]
    }

    /// `s_R(j)`; panics for `j = 0` or `j > j_max`.
    #[inline]
    pub fn right(&self, j: usize) -> T {
        assert!(j >= 1, "tail sums are defined for j >= 1");
        self.right[j - 1]
    }
}
