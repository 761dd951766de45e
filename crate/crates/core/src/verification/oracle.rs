//! Reference computations that rebuild the stencil data without the closed forms.
//!
//! [`weight_oracle`] reassembles `w_k` from the blended integer-order stencils and the cell
//! integrals `v_m`, collecting the coefficient of `u_{i+k}` term by term. [`tail_oracle`]
//! sums the weights directly up to a cutoff and adds the remainder through Hurwitz zeta
//! values of the far-field binomial expansion. Gamma values come from `statrs`, not from
//! the solver's own Lanczos routine.

use statrs::function::gamma::gamma;

use crate::kernel::{Branch, FractionalParams};

type Params = FractionalParams<f64>;

fn pow0(base: f64, exponent: f64) -> f64 {
    if base == 0.0 {
        0.0
    } else {
        base.powf(exponent)
    }
}

fn splitting(params: &Params) -> (f64, f64) {
    let (a, t) = (params.alpha(), params.theta());
    if a == 2.0 {
        return (-0.5, -0.5);
    }
    let s = (a * std::f64::consts::PI).sin();
    let half = std::f64::consts::FRAC_PI_2;
    (((a - t) * half).sin() / s, ((a + t) * half).sin() / s)
}

/// `w_k` rebuilt from the stencil-times-kernel sums.
pub fn weight_oracle(k: i64, params: &Params) -> f64 {
    let (c_l, c_r) = splitting(params);
    let a = params.alpha();
    let reach = k.unsigned_abs() + 2;
    let mut left = 0.0;
    let mut right = 0.0;
    let collect = |stencil: &[(i64, f64)], v: f64, acc: &mut f64| {
        for &(offset, coeff) in stencil {
            if offset == k {
                *acc += 0.5 * coeff * v;
            }
        }
    };
    match params.branch() {
        Branch::BelowOne => {
            let lam = a - params.theta().abs();
            let beta = 1.0 - a;
            let g = gamma(2.0 - a);
            for m in 0..=reach as i64 {
                let v = (pow0((m + 1) as f64, beta) - pow0(m as f64, beta)) / g;
                // backward-leaning first difference on [x_{j-1}, x_j], j = i - m
                let back = [(1 - m, lam), (-m, 2.0 * (1.0 - lam)), (-1 - m, lam - 2.0)];
                // forward-leaning first difference on [x_j, x_{j+1}], j = i + m
                let fwd = [(m + 1, 2.0 - lam), (m, 2.0 * (lam - 1.0)), (m - 1, -lam)];
                collect(&back, v, &mut left);
                collect(&fwd, v, &mut right);
            }
            -(c_l * left - c_r * right)
        }
        Branch::AboveOne => {
            let lam = (2.0 - (a + params.theta().abs())).max(0.0);
            let beta = 2.0 - a;
            let g = gamma(3.0 - a);
            for m in 0..=reach as i64 {
                let v = (pow0((m + 1) as f64, beta) - pow0(m as f64, beta)) / g;
                let back = [
                    (1 - m, 2.0 - lam),
                    (-m, 3.0 * lam - 4.0),
                    (-1 - m, 2.0 - 3.0 * lam),
                    (-2 - m, lam),
                ];
                let fwd = [
                    (m + 2, lam),
                    (m + 1, 2.0 - 3.0 * lam),
                    (m, 3.0 * lam - 4.0),
                    (m - 1, 2.0 - lam),
                ];
                collect(&back, v, &mut left);
                collect(&fwd, v, &mut right);
            }
            -(c_l * left + c_r * right)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Left,
    Right,
}

/// Far-field weights are `scale * Σ_a c_a (m + a)^β` for `|k| = m >= 2`.
struct FarField {
    scale: f64,
    beta: f64,
    shifts: Vec<(f64, f64)>,
}

impl FarField {
    fn new(params: &Params, side: TailSide) -> Self {
        let (c_l, c_r) = splitting(params);
        let c = match side {
            TailSide::Left => c_l,
            TailSide::Right => c_r,
        };
        let a = params.alpha();
        match params.branch() {
            Branch::BelowOne => {
                let lam = a - params.theta().abs();
                Self {
                    scale: -c / (2.0 * gamma(2.0 - a)),
                    beta: 1.0 - a,
                    shifts: vec![
                        (2.0, lam),
                        (1.0, 2.0 - 3.0 * lam),
                        (0.0, 3.0 * lam - 4.0),
                        (-1.0, 2.0 - lam),
                    ],
                }
            }
            Branch::AboveOne => {
                let lam = (2.0 - (a + params.theta().abs())).max(0.0);
                Self {
                    scale: -c / (2.0 * gamma(3.0 - a)),
                    beta: 2.0 - a,
                    shifts: vec![
                        (2.0, 2.0 - lam),
                        (1.0, 4.0 * lam - 6.0),
                        (0.0, 6.0 - 6.0 * lam),
                        (-1.0, 4.0 * lam - 2.0),
                        (-2.0, -lam),
                    ],
                }
            }
        }
    }

    /// `M_n = Σ_a c_a a^n`.
    fn moment(&self, n: i32) -> f64 {
        self.shifts.iter().map(|&(a, c)| c * a.powi(n)).sum()
    }

    /// Terms `(n, binom(β, n) M_n)` of the expansion in powers of `1/x`, from `n = 2`.
    fn expansion(&self, terms: usize) -> Vec<(i32, f64)> {
        let mut binom = 1.0;
        let mut out = Vec::new();
        for n in 0..terms as i32 {
            if n > 0 {
                binom *= (self.beta - (n - 1) as f64) / n as f64;
            }
            let mn = self.moment(n);
            if n >= 2 && mn != 0.0 && binom != 0.0 {
                out.push((n, binom * mn));
            }
        }
        out
    }

    fn direct(&self, m: f64) -> f64 {
        self.shifts
            .iter()
            .map(|&(a, c)| c * pow0(m + a, self.beta))
            .sum::<f64>()
    }

    fn series(&self, m: f64, expansion: &[(i32, f64)]) -> f64 {
        let mut acc = 0.0;
        for &(n, coeff) in expansion {
            let term = coeff * m.powf(self.beta - n as f64);
            acc += term;
            if term.abs() < 1e-19 * acc.abs() {
                break;
            }
        }
        acc
    }
}

/// `ζ(s, q) = Σ_{k>=0} (q + k)^{-s}` for `s > 1`, `q > 0`, by Euler-Maclaurin.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    assert!(s > 1.0 && q > 0.0);
    // B_{2j} / (2j)!
    const B: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30_240.0,
        -1.0 / 1_209_600.0,
        1.0 / 47_900_160.0,
        -691.0 / 1_307_674_368_000.0,
        1.0 / 74_724_249_600.0,
        -3617.0 / 10_670_622_842_880_000.0,
    ];
    let shift = (20.0 - q).max(0.0).ceil() as usize;
    let mut head = 0.0;
    for k in 0..shift {
        head += (q + k as f64).powf(-s);
    }
    let a = q + shift as f64;
    let mut tail = a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // B_{2j}/(2j)! * s (s+1) ... (s+2j-2) * a^{-s-2j+1}
    let mut power = a.powf(-s - 1.0);
    for (idx, b) in B.iter().enumerate() {
        tail += b * rising_factorial(s, 2 * idx + 1) * power;
        power /= a * a;
    }
    head + tail
}

fn rising_factorial(s: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (s + i as f64))
}

/// Tail sum `Σ_{k=j+1}^{∞} w_k` (right) or `Σ_{k<=-j-1} w_k` (left) from an explicit
/// partial sum to `cutoff` plus the zeta-series remainder.
pub fn tail_oracle(side: TailSide, j: usize, params: &Params, cutoff: usize) -> f64 {
    assert!(j >= 1 && cutoff >= j + 2, "need j >= 1 and cutoff >= j + 2");
    let far = FarField::new(params, side);
    let expansion = far.expansion(64);
    // partial sum from the small end, Neumaier-compensated
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for m in (j + 1..=cutoff).rev() {
        let x = m as f64;
        let term = if m <= 64 {
            far.direct(x)
        } else {
            far.series(x, &expansion)
        };
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    let q = (cutoff + 1) as f64;
    let mut remainder = 0.0;
    for &(n, coeff) in &expansion {
        let term = coeff * hurwitz_zeta(n as f64 - far.beta, q);
        remainder += term;
        if term.abs() < 1e-19 * remainder.abs().max(1e-300) {
            break;
        }
    }
    far.scale * (sum + comp + remainder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{tail_sum_left, tail_sum_right, weight};
    use approx::assert_abs_diff_eq;

    fn p(a: f64, t: f64) -> Params {
        FractionalParams::new(a, t).unwrap()
    }

    #[test]
    fn zeta_known_values() {
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert_abs_diff_eq!(hurwitz_zeta(2.0, 1.0), pi2_6, epsilon = 1e-14);
        assert_abs_diff_eq!(hurwitz_zeta(2.0, 3.0), pi2_6 - 1.25, epsilon = 1e-14);
        assert_abs_diff_eq!(
            hurwitz_zeta(4.0, 1.0),
            std::f64::consts::PI.powi(4) / 90.0,
            epsilon = 1e-14
        );
        // ζ(1.5, 1) = 2.612375348685488...
        assert_abs_diff_eq!(
            hurwitz_zeta(1.5, 1.0),
            2.612_375_348_685_488,
            epsilon = 1e-13
        );
    }

    #[test]
    fn reproduces_printed_values() {
        assert_abs_diff_eq!(weight_oracle(0, &p(2.0, 0.0)), -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(weight_oracle(1, &p(2.0, 0.0)), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(weight_oracle(1, &p(0.5, 0.0)), 0.170296, epsilon = 1e-6);
    }

    #[test]
    fn matches_closed_form_skewed() {
        for (a, t) in [
            (0.7, 0.3),
            (0.2, -0.15),
            (1.3, 0.6),
            (1.8, -0.1),
            (1.5, 0.5),
        ] {
            let params = p(a, t);
            for k in -20..=20 {
                assert_abs_diff_eq!(
                    weight_oracle(k, &params),
                    weight(k, &params),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn tail_oracle_against_closed_form() {
        for (a, t) in [(0.5, 0.0), (0.7, 0.3), (1.5, -0.4), (1.3, 0.5)] {
            let params = p(a, t);
            for j in [1, 3, 10] {
                let right = tail_oracle(TailSide::Right, j, &params, 2_000);
                let left = tail_oracle(TailSide::Left, j, &params, 2_000);
                assert_abs_diff_eq!(right, tail_sum_right(j, &params).unwrap(), epsilon = 1e-10);
                assert_abs_diff_eq!(left, tail_sum_left(j, &params).unwrap(), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn tail_oracle_long_partial_sum() {
        let params = p(0.5, 0.0);
        let oracle = tail_oracle(TailSide::Right, 3, &params, 10_000_000);
        assert_abs_diff_eq!(oracle, tail_sum_right(3, &params).unwrap(), epsilon = 1e-8);
    }

    #[test]
    fn tail_oracle_order_two_is_zero() {
        let params = p(2.0, 0.0);
        for j in 1..6 {
            assert_eq!(tail_oracle(TailSide::Right, j, &params, j + 2), 0.0);
            assert_eq!(tail_oracle(TailSide::Left, j, &params, 50), 0.0);
        }
    }
}
