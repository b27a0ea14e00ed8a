//! Tanh-sinh (double-exponential) quadrature and the arithmetic-geometric mean.
//!
//! One engine serves every 1-D integral in the crate: the change of variable
//! `x = tanh((pi/2) sinh u)` absorbs the inverse-square-root and logarithmic
//! endpoint singularities that occur in the measure and period integrals, so
//! the integrands never need case-by-case substitutions.
//!
//! Nodes are generated at an extended precision so that the distance of a node
//! to the nearest endpoint stays representable down to the truncation cutoff;
//! integrand closures receive the node at that extended precision and should
//! form near-cancelling combinations like `1 - t^2` as `(1-t)(1+t)`.

use rug::{ops::Pow, Float};

use crate::precision::PrecisionContext;
use crate::{Error, Real, Result};

/// Endpoint behavior of an integrand, declared by the caller.
///
/// The tanh-sinh engine treats all classes identically; the declaration
/// documents intent and is validated only in debug assertions by callers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityClass {
    None,
    InverseSqrtLeft,
    InverseSqrtRight,
    InverseSqrtBoth,
    LogEndpoint,
}

/// A 1-D integrand over a finite interval with endpoint-only singularities.
pub struct IntegrandSpec<'a> {
    pub f: Box<dyn Fn(&Real) -> Real + Sync + 'a>,
    pub left: Real,
    pub right: Real,
    pub singularity: SingularityClass,
    /// Maximum number of level doublings before giving up.
    pub max_level: u32,
}

impl<'a> IntegrandSpec<'a> {
    pub fn new(
        f: impl Fn(&Real) -> Real + Sync + 'a,
        left: Real,
        right: Real,
        singularity: SingularityClass,
    ) -> Self {
        IntegrandSpec {
            f: Box::new(f),
            left,
            right,
            singularity,
            max_level: 12,
        }
    }
}

/// Integrate `spec` to an absolute accuracy of `10^(-target_digits)`.
///
/// Levels are doubled until two successive trapezoidal refinements agree to
/// `target_digits + 2` digits; failing that within `max_level` doublings is a
/// [`Error::NonConvergence`].
pub fn integrate(spec: &IntegrandSpec, ctx: &PrecisionContext) -> Result<Real> {
    if !(spec.left < spec.right) {
        return Err(Error::DomainError(format!(
            "integration interval [{}, {}] is empty or reversed",
            spec.left, spec.right
        )));
    }
    let d = ctx.target_digits();
    let work = ctx.work_bits();

    // Truncate the u-axis where the double-exponential weight alone is below
    // the requested accuracy even against an inverse-sqrt blowup.
    let sinh_umax = 2.0 * (d as f64 + 6.0) * std::f64::consts::LN_10 / std::f64::consts::PI;
    let u_max = sinh_umax.asinh();
    // Endpoint distances go down to exp(-pi*sinh(u_max)); keep them representable.
    let dist_bits = (std::f64::consts::PI * sinh_umax * std::f64::consts::LOG2_E).ceil() as u32;
    let ext = work + dist_bits + 32;

    let half_pi = Float::with_val(ext, rug::float::Constant::Pi) / 2u32;
    let left = Float::with_val(ext, &spec.left);
    let right = Float::with_val(ext, &spec.right);
    let half = Float::with_val(ext, &right - &left) / 2u32;
    let mid = Float::with_val(ext, &left + &right) / 2u32;

    // Contribution of the node pair at |u| = k*h (or the single node at u=0).
    let eval_node = |u: &Float| -> Result<Float> {
        let w = Float::with_val(ext, u.sinh_ref()) * &half_pi;
        let e2 = Float::with_val(ext, (-Float::with_val(ext, &w * 2u32)).exp());
        let onep = Float::with_val(ext, 1u32) + &e2;
        // half*(1 - tanh w) computed through exp(-2w) to keep tiny distances exact
        let delta = Float::with_val(ext, &half * 2u32) * &e2 / &onep;
        // dx/du = half * (pi/2) cosh(u) sech^2(w)
        let sech2 = Float::with_val(ext, 4u32) * &e2 / (Float::with_val(ext, &onep * &onep));
        let weight =
            Float::with_val(ext, &half * &half_pi) * Float::with_val(ext, u.cosh_ref()) * sech2;
        if weight.is_zero() {
            return Ok(Float::with_val(ext, 0));
        }

        let mut total = Float::with_val(ext, 0);
        if u.is_zero() {
            let fx = (spec.f)(&mid);
            if !fx.is_finite() {
                return Err(Error::DomainError(
                    "integrand non-finite at interval midpoint".into(),
                ));
            }
            total += fx * &weight;
        } else {
            let x_hi = Float::with_val(ext, &right - &delta);
            let x_lo = Float::with_val(ext, &left + &delta);
            for x in [&x_hi, &x_lo] {
                if x <= &left || x >= &right {
                    // node rounded onto an endpoint; its weighted contribution
                    // is below the truncation cutoff
                    continue;
                }
                let fx = (spec.f)(x);
                if !fx.is_finite() {
                    return Err(Error::DomainError(format!(
                        "integrand non-finite at interior node x = {:e}",
                        x.to_f64()
                    )));
                }
                total += fx * &weight;
            }
        }
        Ok(total)
    };

    let agree_tol = ctx.pow10(-(d as i32) - 2);
    let mut h = Float::with_val(ext, 1);
    // level 0: all integer nodes
    let mut sum = Float::with_val(ext, 0);
    let mut k = 0u64;
    loop {
        let u = Float::with_val(ext, k) * &h;
        if u.to_f64() > u_max {
            break;
        }
        sum += eval_node(&u)?;
        k += 1;
    }
    let mut estimate = Float::with_val(ext, &sum * &h);

    for _level in 1..=spec.max_level {
        h /= 2u32;
        // refine with odd multiples of the new step
        let mut odd_sum = Float::with_val(ext, 0);
        let mut k = 1u64;
        loop {
            let u = Float::with_val(ext, k) * &h;
            if u.to_f64() > u_max {
                break;
            }
            odd_sum += eval_node(&u)?;
            k += 2;
        }
        let new_estimate = Float::with_val(ext, &estimate / 2u32) + odd_sum * &h;
        let diff = Float::with_val(ext, &new_estimate - &estimate).abs();
        let scale = Float::with_val(ext, new_estimate.abs_ref()).max(&Float::with_val(ext, 1));
        estimate = new_estimate;
        if diff <= Float::with_val(ext, &agree_tol) * scale {
            return Ok(Float::with_val(work, estimate));
        }
    }
    Err(Error::NonConvergence(format!(
        "tanh-sinh did not reach {} digits within {} level doublings",
        d, spec.max_level
    )))
}

/// Convenience wrapper building an [`IntegrandSpec`] inline.
pub fn integrate_fn(
    f: impl Fn(&Real) -> Real + Sync,
    left: Real,
    right: Real,
    singularity: SingularityClass,
    ctx: &PrecisionContext,
) -> Result<Real> {
    integrate(&IntegrandSpec::new(f, left, right, singularity), ctx)
}

/// Arithmetic-geometric mean of two positive reals.
///
/// Iteration stops when `|a_n - b_n| < 2^(-work_bits + guard_bits) * a_n`.
pub fn agm(a0: &Real, b0: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !(a0.is_finite() && b0.is_finite()) || a0 <= &0 || b0 <= &0 {
        return Err(Error::DomainError(
            "agm requires positive finite arguments".into(),
        ));
    }
    let work = ctx.work_bits();
    let stop = Float::with_val(work, 2).pow(-(work as i32) + ctx.guard_bits() as i32);
    let mut a = Float::with_val(work, a0);
    let mut b = Float::with_val(work, b0);
    for _ in 0..(work as usize) {
        let diff = Float::with_val(work, &a - &b).abs();
        if diff < Float::with_val(work, &stop) * &a {
            break;
        }
        let am = Float::with_val(work, &a + &b) / 2u32;
        let gm = Float::with_val(work, &a * &b).sqrt();
        a = am;
        b = gm;
    }
    Ok((a + b) / 2u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::CompleteRound;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn assert_close(lhs: &Float, rhs: &Float, ctx: &PrecisionContext) {
        let diff = (lhs - rhs).complete(ctx.work_bits()).abs();
        assert!(
            diff < ctx.tolerance(),
            "lhs = {:e}, rhs = {:e}, diff = {:e}",
            lhs.to_f64(),
            rhs.to_f64(),
            diff.to_f64()
        );
    }

    #[test]
    fn arcsine_kernel() {
        let ctx = ctx();
        let v = integrate_fn(
            |t| {
                let one_m = Float::with_val(t.prec(), 1) - t;
                let one_p = Float::with_val(t.prec(), 1) + t;
                (one_m * one_p).sqrt().recip()
            },
            ctx.real(0),
            ctx.real(1),
            SingularityClass::InverseSqrtRight,
            &ctx,
        )
        .unwrap();
        let expect = ctx.pi() / 2u32;
        assert_close(&v, &expect, &ctx);
    }

    #[test]
    fn log_endpoint() {
        let ctx = ctx();
        let v = integrate_fn(
            |t| t.clone().ln(),
            ctx.real(0),
            ctx.real(1),
            SingularityClass::LogEndpoint,
            &ctx,
        )
        .unwrap();
        assert_close(&v, &ctx.real(-1), &ctx);
    }

    // Period-type integral at (a,c) = (sqrt7, 3) against the AGM route:
    // int_{t+}^{1} dt / (sqrt(1-t^2) sqrt((a t + c/2)^2 - 1)) = pi / (4 agm(1, sqrt7/4)).
    #[test]
    fn period_integral_vs_agm() {
        let ctx = ctx();
        let t_plus = -ctx.real(7).sqrt().recip() / 2u32; // (2-c)/(2a) = -1/(2 sqrt7)
        let tp = t_plus.clone();
        let v = integrate_fn(
            |t| {
                // (at + c/2)^2 - 1 = a^2 (t - t_plus)(t - t_minus), factored so the
                // left zero coincides with the stored endpoint
                let p = t.prec();
                let a = Float::with_val(p, 7).sqrt();
                let t_minus = Float::with_val(p, -2.5) / &a;
                let one_m = Float::with_val(p, 1) - t;
                let one_p = Float::with_val(p, 1) + t;
                let fp = t.clone() - Float::with_val(p, &tp);
                let fm = t.clone() - t_minus;
                let a2 = a.square();
                (one_m * one_p * fp * fm * a2).sqrt().recip()
            },
            t_plus,
            ctx.real(1),
            SingularityClass::InverseSqrtBoth,
            &ctx,
        )
        .unwrap();
        let oracle = ctx.pi()
            / (agm(&ctx.real(1), &(ctx.real(7).sqrt() / 4u32), &ctx).unwrap() * 4u32);
        assert_close(&v, &oracle, &ctx);
    }

    #[test]
    fn linearity_and_interval_split() {
        let ctx = ctx();
        let f = |t: &Real| t.clone().sin();
        let g = |t: &Real| t.clone().exp();
        let a = ctx.real(0);
        let b = ctx.real(2);
        let m = ctx.real_str("0.7");
        let alpha = ctx.real_str("1.25");
        let beta = ctx.real_str("-0.5");
        let int = |func: &(dyn Fn(&Real) -> Real + Sync), lo: &Real, hi: &Real| {
            integrate_fn(func, lo.clone(), hi.clone(), SingularityClass::None, &ctx).unwrap()
        };
        let combo = |t: &Real| {
            let p = t.prec();
            Float::with_val(p, 1.25) * f(t) + Float::with_val(p, -0.5) * g(t)
        };
        let lhs = int(&combo, &a, &b);
        let rhs = alpha * int(&f, &a, &b) + beta * int(&g, &a, &b);
        assert_close(&lhs, &rhs, &ctx);

        let whole = int(&f, &a, &b);
        let split = int(&f, &a, &m) + int(&f, &m, &b);
        assert_close(&whole, &split, &ctx);
    }

    #[test]
    fn doubling_precision_is_stable() {
        let ctx = ctx();
        let wide = PrecisionContext::with_parts(
            ctx.work_bits() * 2,
            ctx.target_digits(),
            ctx.guard_bits(),
        )
        .unwrap();
        let run = |c: &PrecisionContext| {
            integrate_fn(
                |t| {
                    let p = t.prec();
                    let one_m = Float::with_val(p, 1) - t;
                    let one_p = Float::with_val(p, 1) + t;
                    (one_m * one_p).sqrt().recip()
                },
                c.real(0),
                c.real(1),
                SingularityClass::InverseSqrtRight,
                c,
            )
            .unwrap()
        };
        let v1 = run(&ctx);
        let v2 = run(&wide);
        let diff = (v1 - Float::with_val(ctx.work_bits(), &v2)).abs();
        assert!(diff < ctx.tolerance());
    }

    #[test]
    fn agm_basics() {
        let ctx = ctx();
        let one = ctx.real(1);
        assert_close(&agm(&one, &one, &ctx).unwrap(), &one, &ctx);
        assert!(agm(&ctx.real(0), &one, &ctx).is_err());
        assert!(agm(&ctx.real(-2), &one, &ctx).is_err());

        // K(z) at z = sqrt3/2 via AGM vs quadrature of the defining integral
        let z = ctx.real(3).sqrt() / 2u32;
        let k_agm = ctx.pi()
            / (agm(
                &one,
                &(ctx.real(1) - z.clone().square()).sqrt(),
                &ctx,
            )
            .unwrap()
                * 2u32);
        let k_quad = integrate_fn(
            |x| {
                let p = x.prec();
                let z = Float::with_val(p, 3).sqrt() / 2u32;
                let one_m = Float::with_val(p, 1) - x;
                let one_p = Float::with_val(p, 1) + x;
                let zx = z * x;
                let w = Float::with_val(p, 1) - zx.square();
                (one_m * one_p * w).sqrt().recip()
            },
            ctx.real(0),
            ctx.real(1),
            SingularityClass::InverseSqrtRight,
            &ctx,
        )
        .unwrap();
        assert_close(&k_agm, &k_quad, &ctx);
    }
}
