//! Mahler measures of the Laurent family `P_{a,b,c} = a(x+1/x) + b(y+1/y) + c`,
//! their half-measure split `m = m^- + m^+`, and the measure of the related
//! family `(1+x)(1+y)(x+y) - (a^2-1)xy`.
//!
//! All measures reduce, via Jensen's formula applied to the quadratic in `y`,
//! to 1-D integrals handled by the tanh-sinh engine. The full measure is
//! integrated in the angle variable while the half-measures use the cosine
//! substitution, so the split identity `m = m^- + m^+` is checked across two
//! genuinely different routes.

use rug::{Complex, Float};

use crate::precision::PrecisionContext;
use crate::quad::{integrate_fn, SingularityClass};
use crate::{Error, Real, Result};

/// Parameters of `P_{a,b,c}(x,y) = a(x+1/x) + b(y+1/y) + c`.
#[derive(Clone, Debug)]
pub struct FamilyParams {
    pub a: Real,
    pub b: Real,
    pub c: Real,
}

impl FamilyParams {
    pub fn new(a: Real, b: Real, c: Real) -> Result<Self> {
        if a.is_zero() || b.is_zero() || !a.is_finite() || !b.is_finite() || !c.is_finite() {
            return Err(Error::DomainError(
                "FamilyParams requires finite a, b, c with a, b nonzero".into(),
            ));
        }
        Ok(FamilyParams { a, b, c })
    }

    /// Two-parameter form `P_{a,c} = P_{a,1,c}`.
    pub fn two_param(a: Real, c: Real, ctx: &PrecisionContext) -> Result<Self> {
        FamilyParams::new(a, ctx.real(1), c)
    }

    /// Is this the normalized form `b = 1`, `a >= 1`, `c >= 0`?
    pub fn is_normalized(&self) -> bool {
        self.b == 1 && self.a >= 1 && self.c >= 0
    }

    /// Reduce to the normalized two-parameter family using the sign
    /// symmetries, the `a <-> b` symmetry and
    /// `m(P_{a,b,c}) = log|b| + m(P_{a/b,1,c/b})`.
    ///
    /// Returns `(offset, a', c')` with `m(self) = offset + m(P_{a',c'})`,
    /// `a' >= 1`, `c' >= 0`.
    pub fn normalized(&self, ctx: &PrecisionContext) -> (Real, Real, Real) {
        let aa = ctx.real(self.a.clone().abs());
        let bb = ctx.real(self.b.clone().abs());
        let cc = ctx.real(self.c.clone().abs());
        let (hi, lo) = if aa >= bb { (aa, bb) } else { (bb, aa) };
        let offset = ctx.real(lo.clone().ln());
        let a_norm = hi / &lo;
        let c_norm = cc / &lo;
        (offset, a_norm, c_norm)
    }
}

/// The critical cosines `t_-`, `t_+` (clamped to `[-1, 1]`) and the matching
/// angles in `[0, pi]` for the normalized family `P_{a,c}`.
#[derive(Clone, Debug)]
pub struct CriticalData {
    pub t_minus: Real,
    pub t_plus: Real,
    pub theta_minus: Real,
    pub theta_plus: Real,
}

impl CriticalData {
    /// `t_- = max{-1, -(2+c)/(2a)}`, `t_+ = min{1, (2-c)/(2a)}`.
    pub fn compute(a: &Real, c: &Real, ctx: &PrecisionContext) -> Self {
        let two_a = ctx.real(2) * a;
        let raw_minus = -(ctx.real(2) + c) / &two_a;
        let raw_plus = (ctx.real(2) - c) / &two_a;
        let t_minus = raw_minus.max(&ctx.real(-1));
        let t_plus = raw_plus.min(&ctx.real(1));
        // acos of a clamped argument; guard against rounding past +-1
        let clamp = |t: &Real| t.clone().min(&ctx.real(1)).max(&ctx.real(-1));
        let theta_minus = clamp(&t_minus).acos();
        let theta_plus = clamp(&t_plus).acos();
        CriticalData {
            t_minus,
            t_plus,
            theta_minus,
            theta_plus,
        }
    }
}

/// `log max{|a|,|b|}` when `|c| <= 2 ||a|-|b||` (the trivially evaluable
/// region), `None` otherwise.
pub fn trivial_region_value(p: &FamilyParams, ctx: &PrecisionContext) -> Option<Real> {
    let aa = ctx.real(p.a.clone().abs());
    let bb = ctx.real(p.b.clone().abs());
    let cc = ctx.real(p.c.clone().abs());
    let gap = ctx.real(2) * ctx.real(ctx.real(&aa - &bb).abs());
    if cc <= gap {
        Some(ctx.real(aa.max(&bb).ln()))
    } else {
        None
    }
}

/// The two branches `y_+-(x)` at `x = e^(i theta)` for the normalized family:
/// roots of `y^2 + (a(x+1/x)+c) y + 1`, with `y_+` taking the principal
/// square root with the `+` sign. Their product is 1.
pub fn y_branches(theta: &Real, p: &FamilyParams, ctx: &PrecisionContext) -> (Complex, Complex) {
    debug_assert!(p.b == 1, "y_branches expects the normalized family b = 1");
    let w = ctx.work_bits();
    let x = Complex::with_val(w, (theta.clone().cos(), theta.clone().sin()));
    let xinv = Complex::with_val(w, x.clone().recip());
    let a_coef = Complex::with_val(w, (x + xinv) * &p.a) + &p.c;
    let disc = Complex::with_val(w, a_coef.clone().square()) - 4u32;
    let root = disc.sqrt();
    let y_plus = (Complex::with_val(w, -a_coef.clone()) + &root) / 2u32;
    let y_minus = (Complex::with_val(w, -a_coef) - root) / 2u32;
    (y_plus, y_minus)
}

/// `log^+|y| + log^+|1/y|` for the branch pair at `u = a cos(theta) + c/2`:
/// `arccosh(|u|)` outside the band `|u| < 1`, zero inside. Tiny negative
/// excursions of `|u| - 1` at region boundaries are rounding artifacts of the
/// boundary itself and clamp to zero.
fn acosh_clamped(u: Real) -> Real {
    let au = u.abs();
    if au <= 1 {
        Float::new(au.prec())
    } else {
        au.acosh()
    }
}

/// Full Mahler measure `m(P_{a,b,c})` by Jensen reduction in the angle
/// variable: `log|b'| + (1/pi) (int_0^(theta_+) + int_(theta_-)^pi) arccosh|u| d theta`.
pub fn mahler_full(p: &FamilyParams, ctx: &PrecisionContext) -> Result<Real> {
    let (offset, a, c) = p.normalized(ctx);
    let crit = CriticalData::compute(&a, &c, ctx);
    let mut total = offset;
    let half_c = ctx.real(&c / 2u32);

    // [0, theta_+]: |y_-| > 1, integrand arccosh(a cos theta + c/2)
    if crit.theta_plus > 0 {
        let (ac, cc) = (a.clone(), half_c.clone());
        let seg = integrate_fn(
            |th| {
                let pbits = th.prec();
                let u = Float::with_val(pbits, &ac) * th.clone().cos()
                    + Float::with_val(pbits, &cc);
                acosh_clamped(u)
            },
            ctx.zero(),
            crit.theta_plus.clone(),
            SingularityClass::None,
            ctx,
        )?;
        total += seg / ctx.pi();
    }

    // [theta_-, pi]: |y_+| > 1, integrand arccosh(-(a cos theta + c/2))
    if crit.theta_minus < ctx.pi() {
        let (ac, cc) = (a.clone(), half_c.clone());
        let seg = integrate_fn(
            |th| {
                let pbits = th.prec();
                let u = Float::with_val(pbits, &ac) * th.clone().cos()
                    + Float::with_val(pbits, &cc);
                acosh_clamped(u)
            },
            crit.theta_minus.clone(),
            ctx.pi(),
            SingularityClass::None,
            ctx,
        )?;
        total += seg / ctx.pi();
    }
    Ok(total)
}

fn require_normalized(p: &FamilyParams) -> Result<()> {
    if p.b != 1 || p.a < 1 || p.c < 0 {
        return Err(Error::DomainError(format!(
            "half-measures need the normalized family b = 1, a >= 1, c >= 0; got a = {}, b = {}, c = {}",
            p.a, p.b, p.c
        )));
    }
    Ok(())
}

/// Half-measure `m^-(P_{a,c}) = (1/pi) int_(t_+)^1 arccosh(a t + c/2) / sqrt(1-t^2) dt`.
///
/// Errors with [`Error::EmptyRegion`] when `t_+ >= 1`.
pub fn mahler_minus(p: &FamilyParams, ctx: &PrecisionContext) -> Result<Real> {
    require_normalized(p)?;
    let crit = CriticalData::compute(&p.a, &p.c, ctx);
    if crit.t_plus >= 1 {
        return Err(Error::EmptyRegion);
    }
    let a = p.a.clone();
    let half_c = ctx.real(&p.c / 2u32);
    let seg = integrate_fn(
        |t| {
            let pbits = t.prec();
            let u = Float::with_val(pbits, &a) * t + Float::with_val(pbits, &half_c);
            let num = acosh_clamped(u);
            let den = ((Float::with_val(pbits, 1) - t) * (Float::with_val(pbits, 1) + t)).sqrt();
            num / den
        },
        crit.t_plus.clone(),
        ctx.real(1),
        SingularityClass::InverseSqrtRight,
        ctx,
    )?;
    Ok(seg / ctx.pi())
}

/// Half-measure `m^+(P_{a,c}) = (1/pi) int_(-1)^(t_-) arccosh(-(a t + c/2)) / sqrt(1-t^2) dt`;
/// zero when the region is empty (`t_- <= -1`).
pub fn mahler_plus(p: &FamilyParams, ctx: &PrecisionContext) -> Result<Real> {
    require_normalized(p)?;
    let crit = CriticalData::compute(&p.a, &p.c, ctx);
    if crit.t_minus <= -1 {
        return Ok(ctx.zero());
    }
    let a = p.a.clone();
    let half_c = ctx.real(&p.c / 2u32);
    let seg = integrate_fn(
        |t| {
            let pbits = t.prec();
            let u = Float::with_val(pbits, &a) * t + Float::with_val(pbits, &half_c);
            let num = acosh_clamped(u);
            let den = ((Float::with_val(pbits, 1) - t) * (Float::with_val(pbits, 1) + t)).sqrt();
            num / den
        },
        ctx.real(-1),
        crit.t_minus.clone(),
        SingularityClass::InverseSqrtLeft,
        ctx,
    )?;
    Ok(seg / ctx.pi())
}

/// The parameter pair of the half-measure theorem at `a > 1`:
/// `c = sqrt(2)(a^2-1)/sqrt(a^2+1)` and `k = 4(a^2-1)/(a^2+1)`, so that
/// `a = sqrt((4+k)/(4-k))`.
pub fn boyd_params(a: &Real, ctx: &PrecisionContext) -> Result<(Real, Real)> {
    if !a.is_finite() || a <= &1 {
        return Err(Error::DomainError(format!("boyd_params needs a > 1, got {}", a)));
    }
    let a2 = ctx.real(a.clone().square());
    let c = ctx.real(2).sqrt() * (a2.clone() - 1u32) / ctx.real((a2.clone() + 1u32).sqrt());
    let k = ctx.real(4) * (a2.clone() - 1u32) / (a2 + 1u32);
    Ok((c, k))
}

/// `m((1+x)(1+y)(x+y) - (a^2-1)xy)` for `a >= 1`.
///
/// With `x = e^(i theta)` and `t = cos(theta/2)`, the quadratic in `y`
/// normalizes to `z^2 + beta z + 1` with `beta = (4t^2 - lambda)/(2t)`,
/// `lambda = a^2-1`; Jensen then gives
/// `(2/pi) int_0^(t2) arccosh((lambda-4t^2)/(4t)) / sqrt(1-t^2) dt` with
/// `t2 = min{1, (a-1)/2}`.
pub fn mahler_conclusion_family(a: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !a.is_finite() || a < &1 {
        return Err(Error::DomainError(format!(
            "conclusion family needs a >= 1, got {}",
            a
        )));
    }
    let lambda = ctx.real(a.clone().square()) - 1u32;
    let t2 = ctx.real((a.clone() - 1u32) / 2u32).min(&ctx.real(1));
    if t2 <= 0 {
        return Ok(ctx.zero());
    }
    let lam = lambda.clone();
    let seg = integrate_fn(
        |t| {
            let pbits = t.prec();
            let t2sq = Float::with_val(pbits, t.clone().square()) * 4u32;
            let u = (Float::with_val(pbits, &lam) - t2sq) / (Float::with_val(pbits, 4) * t);
            let num = acosh_clamped(u);
            let den = ((Float::with_val(pbits, 1) - t) * (Float::with_val(pbits, 1) + t)).sqrt();
            num / den
        },
        ctx.zero(),
        t2,
        SingularityClass::LogEndpoint,
        ctx,
    )?;
    Ok(seg * 2u32 / ctx.pi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::CompleteRound;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn assert_close(lhs: &Real, rhs: &Real, ctx: &PrecisionContext, what: &str) {
        let diff = (lhs - rhs).complete(lhs.prec().max(rhs.prec())).abs();
        assert!(
            diff < ctx.tolerance(),
            "{}: lhs = {:e}, rhs = {:e}, diff = {:e}",
            what,
            lhs.to_f64(),
            rhs.to_f64(),
            diff.to_f64()
        );
    }

    fn sqrt7_family(ctx: &PrecisionContext) -> FamilyParams {
        FamilyParams::two_param(ctx.real(7).sqrt(), ctx.real(3), ctx).unwrap()
    }

    #[test]
    fn trivial_region_cases() {
        let ctx = ctx();
        let p = sqrt7_family(&ctx);
        let v = trivial_region_value(&p, &ctx).expect("(sqrt7,1,3) is in the trivial region");
        let expect = ctx.real(7).ln() / 2u32;
        assert_close(&v, &expect, &ctx, "m(P_{sqrt7,3}) = log sqrt7");

        let p = FamilyParams::new(ctx.real(1), ctx.real(1), ctx.real(3)).unwrap();
        assert!(trivial_region_value(&p, &ctx).is_none());

        let p = FamilyParams::new(ctx.real(5), ctx.real(2), ctx.real(6)).unwrap();
        let v = trivial_region_value(&p, &ctx).unwrap();
        assert_close(&v, &ctx.real(5).ln(), &ctx, "m(P_{5,2,6}) = log 5");
    }

    #[test]
    fn branch_moduli_and_product() {
        let ctx = ctx();
        let p = sqrt7_family(&ctx);
        let crit = CriticalData::compute(&p.a, &p.c, &ctx);

        // cos(theta) slightly above t_+: |y_+| < 1 < |y_-|
        let t = ctx.real(&crit.t_plus + ctx.real(0.05));
        let theta = t.acos();
        let (yp, ym) = y_branches(&theta, &p, &ctx);
        assert!(yp.clone().abs().real() < &1);
        assert!(ym.clone().abs().real() > &1);

        // cos(theta) slightly below t_-: |y_-| < 1 < |y_+|
        let t = ctx.real(&crit.t_minus - ctx.real(0.05));
        let theta = t.acos();
        let (yp, ym) = y_branches(&theta, &p, &ctx);
        assert!(ym.clone().abs().real() < &1);
        assert!(yp.clone().abs().real() > &1);

        // Vieta: y_+ y_- = 1 at an arbitrary angle
        let theta = ctx.real(1.234);
        let (yp, ym) = y_branches(&theta, &p, &ctx);
        let prod = yp * ym;
        let diff = (prod - ctx.complex(1)).abs();
        assert!(diff.real() < &ctx.tolerance());
    }

    #[test]
    fn critical_values_sqrt7() {
        let ctx = ctx();
        let p = sqrt7_family(&ctx);
        let crit = CriticalData::compute(&p.a, &p.c, &ctx);
        let s7 = ctx.real(7).sqrt();
        let tm = ctx.real(-5) / (ctx.real(2) * &s7);
        let tp = ctx.real(-1) / (ctx.real(2) * &s7);
        assert_close(&crit.t_minus, &tm, &ctx, "t_- = -5/(2 sqrt7)");
        assert_close(&crit.t_plus, &tp, &ctx, "t_+ = -1/(2 sqrt7)");
        assert_close(
            &ctx.real(crit.theta_minus.clone().cos()),
            &crit.t_minus,
            &ctx,
            "cos theta_-",
        );
    }

    #[test]
    fn full_measure_matches_trivial_region() {
        let ctx = ctx();
        let p = sqrt7_family(&ctx);
        let m = mahler_full(&p, &ctx).unwrap();
        assert_close(&m, &(ctx.real(7).ln() / 2u32), &ctx, "m(P_{sqrt7,3})");

        let p = FamilyParams::new(ctx.real(2), ctx.real(1), ctx.real(0)).unwrap();
        let m = mahler_full(&p, &ctx).unwrap();
        assert_close(&m, &ctx.real(2).ln(), &ctx, "m(P_{2,1,0}) = log 2");
    }

    #[test]
    fn full_measure_symmetries() {
        let ctx = ctx();
        let base = FamilyParams::new(ctx.real(5), ctx.real(2), ctx.real(6)).unwrap();
        let m = mahler_full(&base, &ctx).unwrap();
        let swapped = FamilyParams::new(ctx.real(2), ctx.real(5), ctx.real(6)).unwrap();
        assert_close(&m, &mahler_full(&swapped, &ctx).unwrap(), &ctx, "a <-> b");
        let negc = FamilyParams::new(ctx.real(5), ctx.real(2), ctx.real(-6)).unwrap();
        assert_close(&m, &mahler_full(&negc, &ctx).unwrap(), &ctx, "c -> -c");

        // normalization identity on a point outside the trivial region
        let p = FamilyParams::new(ctx.real(2), ctx.real(3), ctx.real(1)).unwrap();
        let lhs = mahler_full(&p, &ctx).unwrap();
        let inner = FamilyParams::new(
            ctx.real(2) / ctx.real(3),
            ctx.real(1),
            ctx.real(1) / ctx.real(3),
        )
        .unwrap();
        let rhs = ctx.real(3).ln() + mahler_full(&inner, &ctx).unwrap();
        assert_close(&lhs, &rhs, &ctx, "m(P_{a,b,c}) = log|b| + m(P_{a/b,1,c/b})");
    }

    #[test]
    fn jensen_split_sums_to_log_a() {
        let ctx = ctx();
        for (a, c) in [(ctx.real(7).sqrt(), ctx.real(3)), (ctx.real(3), ctx.real(4))] {
            let p = FamilyParams::two_param(a.clone(), c, &ctx).unwrap();
            let mm = mahler_minus(&p, &ctx).unwrap();
            let mp = mahler_plus(&p, &ctx).unwrap();
            let sum = ctx.real(&mm + &mp);
            assert_close(&sum, &a.ln(), &ctx, "m^- + m^+ = log a");
            let full = mahler_full(&p, &ctx).unwrap();
            assert_close(&sum, &full, &ctx, "m^- + m^+ = m");
        }
    }

    #[test]
    fn plus_measure_vanishes_for_a_eq_1() {
        let ctx = ctx();
        let p = FamilyParams::two_param(ctx.real(1), ctx.real(2.5), &ctx).unwrap();
        let mp = mahler_plus(&p, &ctx).unwrap();
        assert!(mp.is_zero());
        // so m(P_{1,k}) = m^-(P_{1,k})
        let mm = mahler_minus(&p, &ctx).unwrap();
        let full = mahler_full(&p, &ctx).unwrap();
        assert_close(&mm, &full, &ctx, "m(P_{1,k}) = m^-(P_{1,k})");
    }

    #[test]
    fn boyd_params_values_and_round_trip() {
        let ctx = ctx();
        let (c, k) = boyd_params(&ctx.real(7).sqrt(), &ctx).unwrap();
        assert_close(&c, &ctx.real(3), &ctx, "c(sqrt7) = 3");
        assert_close(&k, &ctx.real(3), &ctx, "k(sqrt7) = 3");

        for at in [1.2f64, 2.0, 3.5] {
            let a = ctx.real(at);
            let (_, k) = boyd_params(&a, &ctx).unwrap();
            let back = ((ctx.real(4) + &k) / (ctx.real(4) - &k)).sqrt();
            assert_close(&back, &a, &ctx, "a = sqrt((4+k)/(4-k))");
        }
        assert!(boyd_params(&ctx.real(1), &ctx).is_err());
    }

    #[test]
    fn half_measure_theorem_on_k_grid() {
        let ctx = ctx();
        for kt in ["0.5", "1", "2", "3", "3.5"] {
            let k = ctx.real_str(kt);
            let a = ((ctx.real(4) + &k) / (ctx.real(4) - &k)).sqrt();
            let (c, k2) = boyd_params(&a, &ctx).unwrap();
            assert_close(&k2, &k, &ctx, "k round trip");
            let pk = FamilyParams::two_param(ctx.real(1), k.clone(), &ctx).unwrap();
            let lhs = mahler_full(&pk, &ctx).unwrap();
            let pac = FamilyParams::two_param(a, c, &ctx).unwrap();
            let mm = mahler_minus(&pac, &ctx).unwrap();
            let mp = mahler_plus(&pac, &ctx).unwrap();
            let rhs = mm - ctx.real(3) * mp;
            assert_close(&lhs, &rhs, &ctx, &format!("m(P_1k) = m^- - 3m^+ at k={}", kt));
        }
    }

    // minimal f64 complex arithmetic for the 2-D lattice oracle
    #[derive(Clone, Copy)]
    struct C(f64, f64);
    impl C {
        fn add(self, o: C) -> C {
            C(self.0 + o.0, self.1 + o.1)
        }
        fn sub(self, o: C) -> C {
            C(self.0 - o.0, self.1 - o.1)
        }
        fn mul(self, o: C) -> C {
            C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
        }
        fn scale(self, s: f64) -> C {
            C(self.0 * s, self.1 * s)
        }
        fn abs(self) -> f64 {
            self.0.hypot(self.1)
        }
    }

    /// Midpoint 2-D Riemann sum of log|P| over the torus.
    fn lattice_oracle_conclusion(lambda: f64, n: usize) -> f64 {
        let mut sum = 0.0;
        for j in 0..n {
            let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
            let x = C(th.cos(), th.sin());
            for k in 0..n {
                let ph = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
                let y = C(ph.cos(), ph.sin());
                let one = C(1.0, 0.0);
                let p = one
                    .add(x)
                    .mul(one.add(y))
                    .mul(x.add(y))
                    .sub(x.mul(y).scale(lambda));
                sum += p.abs().ln();
            }
        }
        sum / (n * n) as f64
    }

    #[test]
    fn conclusion_family_values() {
        let ctx = ctx();
        // a = 1: the product (1+x)(1+y)(x+y) has measure 0
        let m1 = mahler_conclusion_family(&ctx.real(1), &ctx).unwrap();
        assert!(m1.is_zero());

        // identity against the two-parameter family at a = sqrt 2
        let a = ctx.real(2).sqrt();
        let lhs = mahler_conclusion_family(&a, &ctx).unwrap();
        let c = ctx.real(a.clone().square()) - 1u32;
        let p = FamilyParams::two_param(a.clone(), c, &ctx).unwrap();
        let rhs = ctx.real(3) * mahler_full(&p, &ctx).unwrap() / 2u32 - a.clone().ln();
        assert_close(&lhs, &rhs, &ctx, "conclusion family vs 3/2 m(P) - log a");

        // low-precision 2-D lattice oracle at a = 2 (lambda = 3)
        let m2 = mahler_conclusion_family(&ctx.real(2), &ctx).unwrap();
        let oracle = lattice_oracle_conclusion(3.0, 700);
        assert!(
            (m2.to_f64() - oracle).abs() < 5e-3,
            "lattice oracle: quadrature = {}, oracle = {}",
            m2.to_f64(),
            oracle
        );
    }

    #[test]
    fn empty_and_invalid_regions() {
        let ctx = ctx();
        // a < 1 rejected by half-measures
        let p = FamilyParams::two_param(ctx.real(0.5), ctx.real(1), &ctx);
        assert!(p.is_ok());
        assert!(mahler_minus(&p.unwrap(), &ctx).is_err());
        // zero coefficient rejected
        assert!(FamilyParams::new(ctx.real(0), ctx.real(1), ctx.real(1)).is_err());
    }
}
