//! Complete elliptic integrals `K`, `E`, `Pi`, the hypergeometric function
//! `F(z) = 2F1(1/2,1/2;1;z)`, and the elliptic-integral identities that drive
//! the derivative proof of the half-measure decomposition.
//!
//! Conventions follow the defining integrals used throughout the crate:
//! `K(z)` and `E(z)` carry `z^2` inside the radical (so `z` is the modulus,
//! not the parameter), and `Pi(n, z)` uses the characteristic `n < 1`.

use rug::Float;

use crate::precision::PrecisionContext;
use crate::quad::{agm, integrate_fn, SingularityClass};
use crate::{Error, Real, Result};

/// Upcast a work-precision constant to the (extended) precision of a node.
fn up(x: &Real, p: u32) -> Real {
    Float::with_val(p, x)
}

fn check_modulus(z: &Real) -> Result<()> {
    if !z.is_finite() || z < &0 || z >= &1 {
        return Err(Error::DomainError(format!(
            "modulus z = {} outside [0, 1)",
            z
        )));
    }
    Ok(())
}

/// Complete elliptic integral `K(z) = int_0^1 dx / sqrt((1-x^2)(1-z^2 x^2))`,
/// computed as `pi / (2 agm(1, sqrt(1-z^2)))`.
pub fn ellint_k(z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_modulus(z)?;
    let one = ctx.real(1);
    let comp = (ctx.real(1) - z.clone()) * (ctx.real(1) + z.clone());
    let m = agm(&one, &comp.sqrt(), ctx)?;
    Ok(ctx.pi() / (m * 2u32))
}

/// Complete elliptic integral `E(z) = int_0^1 sqrt(1-z^2 x^2)/sqrt(1-x^2) dx`.
///
/// Uses the AGM tail sum: `E = K (1 - sum_{n>=0} 2^(n-1) c_n^2)` with
/// `c_0 = z` and `c_n = (a_(n-1) - b_(n-1))/2`.
pub fn ellint_e(z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_modulus(z)?;
    let work = ctx.work_bits();
    let mut a = ctx.real(1);
    let mut b = ((ctx.real(1) - z.clone()) * (ctx.real(1) + z.clone())).sqrt();
    // 2^(-1) c_0^2 term
    let mut csum = ctx.real(z.clone().square()) / 2u32;
    let mut pow2 = ctx.real(1);
    let stop = ctx.pow10(-(ctx.target_digits() as i32) - 8) * ctx.pow10(-8);
    for _ in 0..(work as usize) {
        let c = Float::with_val(work, &a - &b) / 2u32;
        csum += Float::with_val(work, &pow2) * c.clone().square();
        if c.abs() < stop {
            break;
        }
        let am = Float::with_val(work, &a + &b) / 2u32;
        let gm = Float::with_val(work, &a * &b).sqrt();
        a = am;
        b = gm;
        pow2 *= 2u32;
    }
    let k = ctx.pi() / ((a + b) * 1u32);
    Ok(k * (ctx.real(1) - csum))
}

/// Complete elliptic integral of the third kind
/// `Pi(n, z) = int_0^1 dx / ((1 - n x^2) sqrt((1-x^2)(1-z^2 x^2)))`,
/// by tanh-sinh quadrature of the defining integral.
pub fn ellint_pi(n: &Real, z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_modulus(z)?;
    if !n.is_finite() || n >= &1 {
        return Err(Error::DomainError(format!(
            "characteristic n = {} outside (-inf, 1)",
            n
        )));
    }
    let (nn, zz) = (n.clone(), z.clone());
    integrate_fn(
        |x| {
            let p = x.prec();
            let x2 = x.clone().square();
            let pole = Float::with_val(p, 1) - up(&nn, p) * &x2;
            let zx2 = Float::with_val(p, up(&zz, p).square()) * &x2;
            let rad = (Float::with_val(p, 1) - x)
                * (Float::with_val(p, 1) + x)
                * (Float::with_val(p, 1) - zx2);
            (pole * rad.sqrt()).recip()
        },
        ctx.real(0),
        ctx.real(1),
        SingularityClass::InverseSqrtRight,
        ctx,
    )
}

/// Largest modulus argument accepted by the `hyp2f1_half` series.
const HYP_SERIES_CUTOFF: f64 = 0.99;

/// `F(z) = 2F1(1/2,1/2;1;z) = sum_{n>=0} binom(2n,n)^2 (z/16)^n` for
/// `0 <= z < 1`, summed with the geometric tail bound `term/(1-z)`.
///
/// Near `z = 1` (beyond 0.99) the series is refused; use `(2/pi) K(sqrt z)`
/// there instead.
pub fn hyp2f1_half(z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_modulus(z)?;
    if z.to_f64() > HYP_SERIES_CUTOFF {
        return Err(Error::NonConvergence(format!(
            "series for 2F1(1/2,1/2;1;z) at z = {} beyond cutoff {}; use (2/pi) K(sqrt z)",
            z, HYP_SERIES_CUTOFF
        )));
    }
    let work = ctx.work_bits();
    let mut term = ctx.real(1);
    let mut sum = ctx.real(1);
    let tail_factor = (ctx.real(1) - z.clone()).recip();
    let stop = ctx.real(2).recip() >> work; // 2^(-work-1)
    let max_terms = 64 * work as usize;
    for n in 0..max_terms {
        // term_(n+1)/term_n = ((2n+1)/(2n+2))^2 z
        let num = ctx.real(2 * n as u32 + 1);
        let den = ctx.real(2 * n as u32 + 2);
        term *= (num / den).square() * z;
        sum += &term;
        let tail = term.clone().abs() * &tail_factor;
        if tail < stop {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!(
        "2F1 series did not converge in {} terms at z = {}",
        max_terms, z
    )))
}

/// The substitution data shared by the two elliptic-integral lemmas:
/// `v = (u^2+2u-1)/(u^2+1)` with `u > sqrt(2)+1`, `alpha/beta` the roots of
/// the quartic's quadratic factor, and `r = sqrt(w)` the modulus after the
/// quadratic transformation.
#[derive(Clone, Debug)]
pub struct SubstitutionParams {
    pub u: Real,
    pub v: Real,
    pub w: Real,
    pub r: Real,
    pub alpha: Real,
    pub beta: Real,
}

impl SubstitutionParams {
    /// Build from `u > sqrt(2) + 1`.
    pub fn from_u(u: &Real, ctx: &PrecisionContext) -> Result<Self> {
        if !u.is_finite() || u.clone() <= ctx.real(2).sqrt() + 1u32 {
            return Err(Error::DomainError(format!("u = {} <= sqrt(2)+1", u)));
        }
        let u2 = ctx.real(u.clone().square());
        let v = (u2.clone() + ctx.real(2) * u - 1u32) / (u2 + 1u32);
        Self::build(u.clone(), v, ctx)
    }

    /// Build from `1 < v < sqrt(2)`; recovers `u = (1 + sqrt(2-v^2))/(v-1)`.
    pub fn from_v(v: &Real, ctx: &PrecisionContext) -> Result<Self> {
        check_v(v, ctx)?;
        let s = (ctx.real(2) - v.clone().square()).sqrt();
        let u = (ctx.real(1) + s) / (v.clone() - 1u32);
        Self::build(u, v.clone(), ctx)
    }

    fn build(u: Real, v: Real, ctx: &PrecisionContext) -> Result<Self> {
        check_v(&v, ctx)?;
        let v2 = ctx.real(v.clone().square());
        let s = (ctx.real(2) - &v2).sqrt();
        let alpha = (s.clone() - &v2 + 1u32) / &v;
        let beta = (-s.clone() - &v2 + 1u32) / &v;
        let num = ctx.real(1) - ctx.real(2) * &v * &s + ctx.real(2) * &v2
            - v2.clone().square();
        let w = num / (v2 - 1u32).square();
        let r = w.clone().sqrt();
        Ok(SubstitutionParams {
            u,
            v,
            w,
            r,
            alpha,
            beta,
        })
    }
}

fn check_v(v: &Real, ctx: &PrecisionContext) -> Result<()> {
    if !v.is_finite() || v <= &1 || v.clone() >= ctx.real(2).sqrt() {
        return Err(Error::DomainError(format!(
            "v = {} outside (1, sqrt(2))",
            v
        )));
    }
    Ok(())
}

/// Both sides of the first elliptic-integral lemma at parameter `v`:
/// `lhs = int_(3-2v^2)^1 dT / sqrt((1-T^2)(T+2v^2-1)(T+2v^2-3))` and
/// `rhs = int_alpha^1 dt / sqrt((1-t^2)(v^2 t^2 + 2(v^2-1)v t + v^4-v^2-1))`.
pub fn lemma_ei1_check(v: &Real, ctx: &PrecisionContext) -> Result<(Real, Real)> {
    let params = SubstitutionParams::from_v(v, ctx)?;
    let v2 = ctx.real(v.clone().square());

    // lhs: T + 2v^2 - 3 vanishes at the left endpoint; keep it factored as
    // T - left so the zero coincides with the stored endpoint.
    let left = ctx.real(3) - ctx.real(2) * &v2;
    let shift = ctx.real(2) * &v2 - 1u32; // T + 2v^2 - 1, bounded below by 2 on the interval
    let left_c = left.clone();
    let lhs = integrate_fn(
        |t| {
            let p = t.prec();
            let rad = (Float::with_val(p, 1) - t)
                * (Float::with_val(p, 1) + t)
                * (t.clone() + up(&shift, p))
                * (t.clone() - up(&left_c, p));
            rad.sqrt().recip()
        },
        left,
        ctx.real(1),
        SingularityClass::InverseSqrtBoth,
        ctx,
    )?;

    // rhs: the quadratic factors as v^2 (t - alpha)(t - beta) with alpha the
    // left endpoint.
    let (alpha, beta) = (params.alpha.clone(), params.beta.clone());
    let v2c = v2.clone();
    let rhs = integrate_fn(
        |t| {
            let p = t.prec();
            let rad = (Float::with_val(p, 1) - t)
                * (Float::with_val(p, 1) + t)
                * up(&v2c, p)
                * (t.clone() - up(&alpha, p))
                * (t.clone() - up(&beta, p));
            rad.sqrt().recip()
        },
        params.alpha.clone(),
        ctx.real(1),
        SingularityClass::InverseSqrtBoth,
        ctx,
    )?;
    Ok((lhs, rhs))
}

/// The constant of the second elliptic-integral lemma at parameter `v`:
/// `v int_alpha^1 (2t+v) dt / sqrt((1-t^2)(v^2 t^2 + 2(v^2-1)v t + v^4-v^2-1))`,
/// which equals `3 pi / 2` identically.
pub fn lemma_ei2_check(v: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let params = SubstitutionParams::from_v(v, ctx)?;
    let (alpha, beta) = (params.alpha.clone(), params.beta.clone());
    let v2 = ctx.real(v.clone().square());
    let vc = v.clone();
    let integral = integrate_fn(
        |t| {
            let p = t.prec();
            let num = Float::with_val(p, 2) * t + up(&vc, p);
            let rad = (Float::with_val(p, 1) - t)
                * (Float::with_val(p, 1) + t)
                * up(&v2, p)
                * (t.clone() - up(&alpha, p))
                * (t.clone() - up(&beta, p));
            num / rad.sqrt()
        },
        params.alpha.clone(),
        ctx.real(1),
        SingularityClass::InverseSqrtBoth,
        ctx,
    )?;
    Ok(integral * v)
}

/// The Legendre canonical form of the second lemma's constant at `r = sqrt(w)`:
/// `(1-r)((1-r-2 sqrt(r^2+1)) K(r^2) + 4 sqrt(r^2+1) Pi(f(r), r^2))` with
/// `f(r) = r (sqrt(r^2+1)+1)(sqrt(r^2+1)-r)`.
pub fn lemma_ei2_legendre(r: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !r.is_finite() || r <= &0 || r >= &1 {
        return Err(Error::DomainError(format!("r = {} outside (0, 1)", r)));
    }
    let s = (ctx.real(r.clone().square()) + 1u32).sqrt();
    let f = r.clone() * (s.clone() + 1u32) * (s.clone() - r.clone());
    let r2 = ctx.real(r.clone().square());
    let k = ellint_k(&r2, ctx)?;
    let pi3 = ellint_pi(&f, &r2, ctx)?;
    let inner = (ctx.real(1) - r.clone() - ctx.real(2) * &s) * k + ctx.real(4) * s * pi3;
    Ok((ctx.real(1) - r.clone()) * inner)
}

/// The four period-type integrals of the derivative proof, all normalized
/// by `4/pi` (`8/pi` for `k`).
#[derive(Clone, Debug)]
pub struct Periods {
    pub i: Real,
    pub j_minus: Real,
    pub j_plus: Real,
    pub k: Real,
}

/// Period integrals at parameter `u > sqrt(2) + 1`, under the constraint
/// `c/2 = (a^2-1)/sqrt(2(a^2+1))` with `a = (u^2+2u-1)/(u^2-2u-1)`.
///
/// Satisfies `j_minus - j_plus = 4`, `k = 2(u^2+1)/(u^2+2u-1) * i` and
/// `j_minus + 3 j_plus = -2(u^2+2u-1)/(u^2+1) * i`.
pub fn periods_ijk(u: &Real, ctx: &PrecisionContext) -> Result<Periods> {
    if !u.is_finite() || u.clone() <= ctx.real(2).sqrt() + 1u32 {
        return Err(Error::DomainError(format!("u = {} <= sqrt(2)+1", u)));
    }
    let u2 = ctx.real(u.clone().square());
    let a = (u2.clone() + ctx.real(2) * u - 1u32) / (u2.clone() - ctx.real(2) * u - 1u32);
    let a2 = ctx.real(a.clone().square());
    let c2 = (a2.clone() - 1u32) / (ctx.real(2) * (a2.clone() + 1u32)).sqrt();
    let t_minus = -(ctx.real(1) + &c2) / &a;
    let t_plus = (ctx.real(1) - &c2) / &a;
    let kmod = ctx.real(4) * (a2.clone() - 1u32) / (a2 + 1u32);

    // Right lobe [t_plus, 1]: (t - t_plus) is the endpoint factor.
    let (tm, tp) = (t_minus.clone(), t_plus.clone());
    let right_lobe = |weight_t: bool| {
        let (tm, tp) = (tm.clone(), tp.clone());
        move |t: &Real| {
            let p = t.prec();
            let rad = (Float::with_val(p, 1) - t)
                * (Float::with_val(p, 1) + t)
                * (t.clone() - up(&tm, p))
                * (t.clone() - up(&tp, p));
            let base = rad.sqrt().recip();
            if weight_t {
                base * t
            } else {
                base
            }
        }
    };
    let four_over_pi = ctx.real(4) / ctx.pi();
    let i_right = integrate_fn(
        right_lobe(false),
        t_plus.clone(),
        ctx.real(1),
        SingularityClass::InverseSqrtBoth,
        ctx,
    )? * &four_over_pi;
    let j_minus = integrate_fn(
        right_lobe(true),
        t_plus.clone(),
        ctx.real(1),
        SingularityClass::InverseSqrtBoth,
        ctx,
    )? * &four_over_pi;

    // Left lobe [-1, t_minus]: both roots lie at or above the right endpoint,
    // so the positive product is (t_minus - t)(t_plus - t).
    let (tm, tp) = (t_minus.clone(), t_plus.clone());
    let left_lobe = |weight_t: bool| {
        let (tm, tp) = (tm.clone(), tp.clone());
        move |t: &Real| {
            let p = t.prec();
            let rad = (Float::with_val(p, 1) - t)
                * (Float::with_val(p, 1) + t)
                * (up(&tm, p) - t)
                * (up(&tp, p) - t);
            let base = rad.sqrt().recip();
            if weight_t {
                base * t
            } else {
                base
            }
        }
    };
    let j_plus = integrate_fn(
        left_lobe(true),
        ctx.real(-1),
        t_minus.clone(),
        SingularityClass::InverseSqrtBoth,
        ctx,
    )? * &four_over_pi;

    // K-period: left endpoint 1 - k/2, with T + k/2 - 1 = T - left the
    // endpoint factor and T + k/2 + 1 bounded below by 2.
    let left = ctx.real(1) - kmod.clone() / 2u32;
    let shift = kmod.clone() / 2u32 + 1u32;
    let left_c = left.clone();
    let kper = integrate_fn(
        |t| {
            let p = t.prec();
            let rad = (Float::with_val(p, 1) - t)
                * (Float::with_val(p, 1) + t)
                * (t.clone() - up(&left_c, p))
                * (t.clone() + up(&shift, p));
            rad.sqrt().recip()
        },
        left,
        ctx.real(1),
        SingularityClass::InverseSqrtBoth,
        ctx,
    )? * ctx.real(8)
        / ctx.pi();

    Ok(Periods {
        i: i_right,
        j_minus,
        j_plus,
        k: kper,
    })
}

/// `I` computed over the left lobe `[-1, t_minus]`; equals `Periods::i` by
/// the standard relation of the two real periods.
pub fn period_i_left_lobe(u: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !u.is_finite() || u.clone() <= ctx.real(2).sqrt() + 1u32 {
        return Err(Error::DomainError(format!("u = {} <= sqrt(2)+1", u)));
    }
    let u2 = ctx.real(u.clone().square());
    let a = (u2.clone() + ctx.real(2) * u - 1u32) / (u2.clone() - ctx.real(2) * u - 1u32);
    let a2 = ctx.real(a.clone().square());
    let c2 = (a2.clone() - 1u32) / (ctx.real(2) * (a2.clone() + 1u32)).sqrt();
    let t_minus = -(ctx.real(1) + &c2) / &a;
    let t_plus = (ctx.real(1) - &c2) / &a;
    let (tm, tp) = (t_minus.clone(), t_plus.clone());
    let v = integrate_fn(
        |t| {
            let p = t.prec();
            let rad = (Float::with_val(p, 1) - t)
                * (Float::with_val(p, 1) + t)
                * (up(&tm, p) - t)
                * (up(&tp, p) - t);
            rad.sqrt().recip()
        },
        ctx.real(-1),
        t_minus,
        SingularityClass::InverseSqrtBoth,
        ctx,
    )?;
    Ok(v * ctx.real(4) / ctx.pi())
}
