//! The L-function of the conductor-21 newform `f_21`: coefficients `a_n` by
//! point counting on `y^2 = x^3 + x^2 + 16x` (the family curve at `a = 1`,
//! `c = 3`, cleared of denominators), `L(f_21, 2)` by an exponentially
//! smoothed series from the functional equation, the Eisenstein L-value
//! `L(g, 2)`, and the conversion to `L'(f_21, 0)`.

use std::io::Write as _;
use std::path::Path;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::mahler::{boyd_params, mahler_full, mahler_minus, FamilyParams};
use crate::precision::PrecisionContext;
use crate::qseries::QSeries;
use crate::{Error, Real, Result};

/// Level of the newform.
pub const LEVEL: u32 = 21;
/// Weight of the newform.
pub const WEIGHT: u32 = 2;

/// Hecke eigenvalues `a_n`, `1 <= n <= N`.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    /// `a[n]` is the coefficient of `q^n`; `a[0]` is unused and zero.
    a: Vec<i64>,
}

/// The L-function data: level, weight, functional-equation sign and
/// coefficient table.
#[derive(Clone, Debug)]
pub struct LFunctionSpec {
    pub level: u32,
    pub weight: u32,
    pub sign_eps: i32,
    pub coeffs: CoefficientTable,
}

/// `a_p` for prime `p` by naive point enumeration over `F_p` on
/// `y^2 = x^3 + x^2 + 16x`.
///
/// The model has bad reduction at 2, 3 and 7, but the conductor is 21, so
/// only 3 and 7 are genuinely bad: there `a_p = p - #E_ns(F_p)`
/// (multiplicative reduction). At 2 the model is non-minimal; the minimal
/// model has good reduction with `a_2 = -1`, which is returned directly.
pub fn ap_point_count(p: u64) -> i64 {
    assert!(p >= 2, "p must be prime");
    if p == 2 {
        return -1;
    }
    // quadratic-residue table
    let mut is_sq = vec![false; p as usize];
    for x in 0..p {
        is_sq[((x * x) % p) as usize] = true;
    }
    let f = |x: u64| -> u64 { (((x * x) % p * x) % p + (x * x) % p + (16 * x) % p) % p };
    if p == 3 || p == 7 {
        // multiplicative reduction: a_p = p - #E_ns(F_p), the singular point
        // (y = 0, f(x) = f'(x) = 0) excluded, point at infinity included
        let fp = |x: u64| -> u64 { ((3 * x * x) % p + (2 * x) % p + 16) % p };
        let mut count = 1u64; // infinity
        for x in 0..p {
            let v = f(x);
            if v == 0 {
                if fp(x) != 0 {
                    count += 1; // nonsingular point (x, 0)
                }
            } else if is_sq[v as usize] {
                count += 2;
            }
        }
        return p as i64 - count as i64;
    }
    // good reduction: a_p = -sum_x chi(f(x))
    let mut s = 0i64;
    for x in 0..p {
        let v = f(x);
        if v == 0 {
            continue;
        }
        s += if is_sq[v as usize] { 1 } else { -1 };
    }
    -s
}

impl CoefficientTable {
    /// Largest index available.
    pub fn len(&self) -> usize {
        self.a.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: usize) -> i64 {
        self.a[n]
    }

    /// Fill `a_1..a_N` from prime point counts via the Hecke recurrences:
    /// `a_{p^{r+1}} = a_p a_{p^r} - p a_{p^{r-1}}` for good `p`,
    /// `a_{p^r} = a_p^r` for `p | 21`, and multiplicativity elsewhere.
    pub fn build(n_max: usize) -> Self {
        assert!(n_max >= 1);
        // smallest prime factor sieve
        let mut spf = vec![0usize; n_max + 1];
        for i in 2..=n_max {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n_max {
                    if spf[j] == 0 {
                        spf[j] = i;
                    }
                    j += i;
                }
            }
        }
        let mut a = vec![0i64; n_max + 1];
        if n_max >= 1 {
            a[1] = 1;
        }
        for n in 2..=n_max {
            let p = spf[n];
            // p-primary part of n
            let mut v = p;
            let mut m = n / p;
            while m % p == 0 {
                v *= p;
                m /= p;
            }
            if m > 1 {
                a[n] = a[v] * a[m];
            } else if v == p {
                a[n] = ap_point_count(p as u64);
            } else if p == 3 || p == 7 {
                a[n] = a[p] * a[n / p];
            } else {
                a[n] = a[p] * a[n / p] - (p as i64) * a[n / (p * p)];
            }
        }
        CoefficientTable { a }
    }

    /// Write the table as a plain-text cache: comment header, then `n a_n`
    /// lines.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        writeln!(
            f,
            "# f21 coefficients; curve y^2 = x^3 + x^2 + 16x; level 21; \
             bad primes 3,7 multiplicative; a_2 = -1 from the minimal model"
        )?;
        for n in 1..=self.len() {
            writeln!(f, "{} {}", n, self.a[n])?;
        }
        Ok(())
    }

    /// Read a cache previously written by [`write_cache`](Self::write_cache).
    pub fn read_cache(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let n: usize = it
                .next()
                .ok_or_else(|| Error::CacheParse(format!("line {}: missing index", lineno + 1)))?
                .parse()
                .map_err(|e| Error::CacheParse(format!("line {}: bad index: {}", lineno + 1, e)))?;
            let an: i64 = it
                .next()
                .ok_or_else(|| {
                    Error::CacheParse(format!("line {}: missing coefficient", lineno + 1))
                })?
                .parse()
                .map_err(|e| {
                    Error::CacheParse(format!("line {}: bad coefficient: {}", lineno + 1, e))
                })?;
            if n != entries.len() + 1 {
                return Err(Error::CacheParse(format!(
                    "line {}: expected index {}, found {}",
                    lineno + 1,
                    entries.len() + 1,
                    n
                )));
            }
            entries.push(an);
        }
        if entries.is_empty() {
            return Err(Error::CacheParse("cache holds no coefficients".into()));
        }
        let mut a = vec![0i64];
        a.extend(entries);
        Ok(CoefficientTable { a })
    }

    /// The q-expansion of `f_21` as an exact series (grading 1).
    pub fn f21_series(&self, n_terms: usize) -> QSeries {
        assert!(n_terms + 1 <= self.len());
        let coeffs: Vec<Rational> = (1..=n_terms + 1).map(|n| Rational::from(self.a[n])).collect();
        QSeries::new(Rational::from(1), coeffs)
    }
}

/// Coefficients needed so both smoothed tails at split point `x` are below
/// working precision.
pub fn coefficient_bound(split: f64, ctx: &PrecisionContext) -> usize {
    let lambda = 2.0 * std::f64::consts::PI / 21f64.sqrt();
    let bits = ctx.work_bits() as f64 + 24.0;
    let m = split.min(1.0 / split);
    ((bits * std::f64::consts::LN_2) / (lambda * m)).ceil() as usize + 8
}

/// Smoothed evaluation of `L(f_21, 2)` at split point `x` with
/// functional-equation sign `eps`:
/// `L(2) = sum a_n/n^2 G2(l_n x) + eps (2pi/sqrt21)^2 sum a_n G0(l_n / x)`,
/// `l_n = 2 pi n / sqrt(21)`, `G2(t) = (1 + t) e^(-t)`, `G0(t) = Gamma(0, t)`.
pub fn l_f21_smoothed(
    table: &CoefficientTable,
    eps: i32,
    split: &Real,
    ctx: &PrecisionContext,
) -> Result<Real> {
    let n_terms = coefficient_bound(split.to_f64(), ctx);
    if table.len() < n_terms {
        return Err(Error::NonConvergence(format!(
            "need {} coefficients for the smoothed tail, table has {}",
            n_terms,
            table.len()
        )));
    }
    let w = ctx.work_bits();
    let lambda = ctx.pi() * 2u32 / ctx.real(21).sqrt();
    let mut direct = ctx.zero();
    let mut dual = ctx.zero();
    for n in 1..=n_terms {
        let an = table.get(n);
        if an == 0 {
            continue;
        }
        let ln = Float::with_val(w, &lambda * n as u32);
        let t1 = Float::with_val(w, &ln * split);
        let g2 = (Float::with_val(w, 1) + &t1) * (-t1).exp();
        direct += Float::with_val(w, an) / Float::with_val(w, (n * n) as u64) * g2;
        let t0 = ln / split;
        let g0 = Float::with_val(w, 0).gamma_inc(&t0);
        dual += Float::with_val(w, an) * g0;
    }
    let pref = Float::with_val(w, lambda.square());
    Ok(direct + Float::with_val(w, pref * dual) * eps)
}

/// Determine the functional-equation sign by split-point self-consistency:
/// exactly one choice of `eps` makes the smoothed value independent of the
/// split point.
pub fn determine_epsilon(table: &CoefficientTable, ctx: &PrecisionContext) -> Result<i32> {
    let x1 = ctx.real(1);
    let x2 = ctx.real(4) / 3u32;
    let tol = ctx.pow10(-(ctx.target_digits() as i32) + 2);
    let mut consistent = Vec::new();
    for eps in [1i32, -1] {
        let v1 = l_f21_smoothed(table, eps, &x1, ctx)?;
        let v2 = l_f21_smoothed(table, eps, &x2, ctx)?;
        if Float::with_val(ctx.work_bits(), &v1 - &v2).abs() < tol {
            consistent.push(eps);
        }
    }
    match consistent.as_slice() {
        [eps] => Ok(*eps),
        _ => Err(Error::NonConvergence(format!(
            "epsilon self-test found {} consistent signs",
            consistent.len()
        ))),
    }
}

/// `L(f_21, 2)` with the self-consistent sign at split point 1.
pub fn l_f21_at_2(table: &CoefficientTable, ctx: &PrecisionContext) -> Result<Real> {
    let eps = determine_epsilon(table, ctx)?;
    l_f21_smoothed(table, eps, &ctx.real(1), ctx)
}

/// `L'(f_21, 0) = (21 / 4 pi^2) L(f_21, 2)` by the functional equation.
pub fn lprime_f21_at_0(table: &CoefficientTable, ctx: &PrecisionContext) -> Result<Real> {
    let w = ctx.work_bits();
    let l2 = l_f21_at_2(table, ctx)?;
    Ok(l2 * ctx.real(21) / (Float::with_val(w, ctx.pi().square()) * 4u32))
}

/// Slow oracle for `L(f_21, 2)`: f64 partial sums of `sum a_n / n^2` with a
/// Cesaro average over the last quarter of the partial sums to damp the
/// oscillating tail. Accurate to a few digits only.
pub fn l_f21_oracle(table: &CoefficientTable, n_terms: usize) -> f64 {
    assert!(table.len() >= n_terms);
    let mut partial = 0f64;
    let mut acc = 0f64;
    let mut count = 0usize;
    let start = 3 * n_terms / 4;
    for n in 1..=n_terms {
        partial += table.get(n) as f64 / (n as f64 * n as f64);
        if n > start {
            acc += partial;
            count += 1;
        }
    }
    acc / count as f64
}

/// `L(g, 2)` for the Eisenstein combination `g`: numeric limit of
/// `-24 (-1 + 3^{1-s} + 49 7^{-s} - 147 21^{-s}) zeta(s-1) zeta(s)` at
/// `s -> 2` (two-sided average across the `zeta(s-1)` pole), and the
/// closed form `(8 pi^2 / 3) log 7`.
pub fn l_g_at_2(ctx: &PrecisionContext) -> (Real, Real) {
    // the prefactor has a simple zero at s = 2 cancelling the zeta pole;
    // widen the precision to absorb the 1/delta blow-up before cancellation
    let half = (ctx.target_digits() as i32 + 8) / 2;
    let wctx = ctx.widened(4 * half as u32 + 64);
    let w = wctx.work_bits();
    let delta = wctx.pow10(-half);
    let eval = |s: &Real| -> Real {
        let h = Float::with_val(w, 1) * (-1i32)
            + Float::with_val(w, 3).pow(&(Float::with_val(w, 1) - s))
            + Float::with_val(w, 49) * Float::with_val(w, 7).pow(&(-s.clone()))
            - Float::with_val(w, 147) * Float::with_val(w, 21).pow(&(-s.clone()));
        let z1 = Float::with_val(w, s - 1u32).zeta();
        let z2 = s.clone().zeta();
        h * z1 * z2 * (-24i32)
    };
    let s_hi = Float::with_val(w, 2u32) + &delta;
    let s_lo = Float::with_val(w, 2u32) - &delta;
    let numeric = (eval(&s_hi) + eval(&s_lo)) / 2u32;
    let numeric = ctx.real(numeric);
    let closed = ctx.real(8) * Float::with_val(ctx.work_bits(), ctx.pi().square())
        / 3u32
        * ctx.real(7).ln();
    (numeric, closed)
}

/// Theorem 3: `m^-(P_{sqrt7,3})` against `(1/2) L'(f_21, 0) + (3/8) log 7`.
pub fn theorem3_check(table: &CoefficientTable, ctx: &PrecisionContext) -> Result<(Real, Real)> {
    let a = ctx.real(7).sqrt();
    let params = FamilyParams::two_param(a, ctx.real(3), ctx)?;
    let lhs = mahler_minus(&params, ctx)?;
    let lp = lprime_f21_at_0(table, ctx)?;
    let rhs = lp / 2u32 + ctx.real(3) * ctx.real(7).ln() / 8u32;
    Ok((lhs, rhs))
}

/// The regulator exponent of Prop. 5.1:
/// `p_est = (m^-(P_{a,c}) - m(P_{1,k})/4) / log a`, which the measure
/// identities force to equal `3/4` whenever `(c, k) = boyd_params(a)`.
pub fn regulator_p_estimate(a: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let w = ctx.work_bits();
    let (c, k) = boyd_params(a, ctx)?;
    let two = FamilyParams::two_param(a.clone(), c, ctx)?;
    let m_minus = mahler_minus(&two, ctx)?;
    let one = FamilyParams::new(ctx.real(1), ctx.real(1), k)?;
    let m_k = mahler_full(&one, ctx)?;
    Ok((m_minus - m_k / 4u32) / Float::with_val(w, a.clone().ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mahler::mahler_plus;
    use crate::qseries::eisenstein_g_series;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use rug::Integer;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn table() -> CoefficientTable {
        CoefficientTable::build(400)
    }

    fn assert_close(lhs: &Real, rhs: &Real, ctx: &PrecisionContext, what: &str) {
        let diff = Float::with_val(ctx.work_bits(), lhs - rhs).abs();
        assert!(
            diff < ctx.tolerance(),
            "{}: lhs = {}, rhs = {}, diff = {:e}",
            what,
            lhs.to_f64(),
            rhs.to_f64(),
            diff.to_f64()
        );
    }

    #[test]
    fn expansion_prefix() {
        let t = table();
        let expect = [1i64, -1, 1, -1, -2, -1, -1, 3, 1, 2];
        for (i, &e) in expect.iter().enumerate().take(4) {
            assert_eq!(t.get(i + 1), e, "a_{}", i + 1);
        }
        // a_5 from the brute-force count feeds the rest of the known prefix
        assert_eq!(t.get(5), -2);
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(t.get(i + 1), e, "a_{}", i + 1);
        }
        assert_eq!(t.get(21), t.get(3) * t.get(7));
    }

    #[test]
    fn hasse_bound_small_primes() {
        for p in (2u64..=10_000).filter(|&p| is_prime(p)) {
            let ap = ap_point_count(p);
            if p == 3 || p == 7 {
                assert_eq!(ap.abs(), 1, "bad prime {}", p);
                continue;
            }
            let bound = 2.0 * (p as f64).sqrt();
            assert!((ap as f64).abs() <= bound, "Hasse bound at p = {}", p);
        }
    }

    fn is_prime(n: u64) -> bool {
        Integer::from(n).is_probably_prime(32) != rug::integer::IsPrime::No
    }

    #[test]
    fn multiplicativity_random_pairs() {
        let t = CoefficientTable::build(40_000);
        let mut rng = StdRng::seed_from_u64(21);
        let mut found = 0;
        while found < 100 {
            let m = rng.gen_range(2usize..=200);
            let n = rng.gen_range(2usize..=200);
            if gcd(m as u64, n as u64) != 1 {
                continue;
            }
            assert_eq!(t.get(m * n), t.get(m) * t.get(n), "a_{} a_{}", m, n);
            found += 1;
        }
        // prime-power recurrence spot checks
        assert_eq!(t.get(4), t.get(2) * t.get(2) - 2);
        assert_eq!(t.get(9), t.get(3) * t.get(3), "a_9 = a_3^2 at bad prime 3");
        assert_eq!(t.get(25), t.get(5) * t.get(5) - 5);
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn cache_roundtrip_and_errors() {
        let t = table();
        let dir = std::env::temp_dir();
        let path = dir.join("f21_cache_test.txt");
        t.write_cache(&path).unwrap();
        let back = CoefficientTable::read_cache(&path).unwrap();
        assert_eq!(back.len(), t.len());
        for n in 1..=t.len() {
            assert_eq!(back.get(n), t.get(n));
        }
        std::fs::remove_file(&path).ok();

        let bad = dir.join("f21_cache_bad.txt");
        std::fs::write(&bad, "# header\n1 1\n3 7\n").unwrap();
        assert!(matches!(
            CoefficientTable::read_cache(&bad),
            Err(Error::CacheParse(_))
        ));
        std::fs::write(&bad, "1 x\n").unwrap();
        assert!(matches!(
            CoefficientTable::read_cache(&bad),
            Err(Error::CacheParse(_))
        ));
        std::fs::remove_file(&bad).ok();
    }

    #[test]
    fn epsilon_self_consistency() {
        let ctx = ctx();
        let t = table();
        let eps = determine_epsilon(&t, &ctx).unwrap();
        assert_eq!(eps, 1, "level-21 functional-equation sign");
        // the wrong sign disagrees across split points well beyond tolerance
        let v1 = l_f21_smoothed(&t, -1, &ctx.real(1), &ctx).unwrap();
        let v2 = l_f21_smoothed(&t, -1, &(ctx.real(4) / 3u32), &ctx).unwrap();
        assert!(Float::with_val(ctx.work_bits(), v1 - v2).abs() > ctx.real(1e-6));
    }

    #[test]
    fn l2_value_stability_and_oracle() {
        let ctx = ctx();
        let t = table();
        let l2 = l_f21_at_2(&t, &ctx).unwrap();
        assert!(l2 > 0, "L(f21, 2) > 0");

        // stable under changing the split point (equivalent smoothing length)
        let alt = l_f21_smoothed(&t, 1, &ctx.real(1.25), &ctx).unwrap();
        assert_close(&l2, &alt, &ctx, "split-point stability");

        // widened-precision run (longer truncation) agrees
        let wide = PrecisionContext::new(ctx.target_digits() + 10);
        let t_wide = CoefficientTable::build(coefficient_bound(1.0, &wide) + 1);
        let l2_wide = l_f21_smoothed(&t_wide, 1, &wide.real(1), &wide).unwrap();
        let diff = Float::with_val(wide.work_bits(), &l2 - &l2_wide).abs();
        assert!(diff < ctx.tolerance(), "truncation doubling");

        // slow conditionally-convergent oracle to a few digits
        let t_long = CoefficientTable::build(60_000);
        let oracle = l_f21_oracle(&t_long, 60_000);
        assert!((oracle - l2.to_f64()).abs() < 1e-3, "oracle {} vs {}", oracle, l2.to_f64());

        // under-provisioned table errors out
        let short = CoefficientTable::build(10);
        assert!(matches!(
            l_f21_smoothed(&short, 1, &ctx.real(1), &ctx),
            Err(Error::NonConvergence(_))
        ));
    }

    #[test]
    fn eisenstein_l_value() {
        let ctx = ctx();
        let (numeric, closed) = l_g_at_2(&ctx);
        assert_close(&numeric, &closed, &ctx, "L(g,2) limit vs closed form");
        // the prefactor vanishes at s = 2: -1 + 1/3 + 1 - 1/3 = 0
        let h2 = Rational::from((-1, 1))
            + Rational::from((1, 3))
            + Rational::from((49, 49))
            - Rational::from((147, 441));
        assert_eq!(h2, Rational::new());
    }

    #[test]
    fn lemma72_decomposition_prefix() {
        // f = (21/4) f21 + (9/32) g has expansion 12q + 15q^2 + 12q^3 + 42q^4
        let t = table();
        let f21 = t.f21_series(10);
        let g = eisenstein_g_series(10).unwrap();
        let f = f21
            .scale(&Rational::from((21u32, 4u32)))
            .add(&g.scale(&Rational::from((9u32, 32u32))))
            .unwrap();
        assert_eq!(*f.grading(), Rational::new());
        let expect = [0i64, 12, 15, 12, 42];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(*f.coeff(n), Rational::from(e), "f coefficient of q^{}", n);
        }
    }

    #[test]
    fn theorem3_and_companion() {
        let ctx = ctx();
        let t = table();
        let (lhs, rhs) = theorem3_check(&t, &ctx).unwrap();
        assert_close(&lhs, &rhs, &ctx, "Theorem 3");

        // companion: m+(P_{sqrt7,3}) = -L'/2 + (1/8) log 7, and the sum of the
        // half-measures is (1/2) log 7
        let a = ctx.real(7).sqrt();
        let params = FamilyParams::two_param(a, ctx.real(3), &ctx).unwrap();
        let m_plus = mahler_plus(&params, &ctx).unwrap();
        let lp = lprime_f21_at_0(&t, &ctx).unwrap();
        let companion = ctx.real(7).ln() / 8u32 - lp / 2u32;
        assert_close(&m_plus, &companion, &ctx, "companion half-measure");
        let sum = Float::with_val(ctx.work_bits(), &lhs + &m_plus);
        let half_log7 = ctx.real(7).ln() / 2u32;
        assert_close(&sum, &half_log7, &ctx, "half-measure sum");
    }

    #[test]
    fn boyd_conjecture_21() {
        // m(P_3) = 2 L'(f21, 0), both sides by independent pipelines
        let ctx = ctx();
        let t = table();
        let p3 = FamilyParams::new(ctx.real(1), ctx.real(1), ctx.real(3)).unwrap();
        let lhs = mahler_full(&p3, &ctx).unwrap();
        let rhs = lprime_f21_at_0(&t, &ctx).unwrap() * 2u32;
        assert_close(&lhs, &rhs, &ctx, "Boyd conjecture at k = 3");
    }

    #[test]
    fn regulator_estimates() {
        let ctx = ctx();
        let three_quarters = ctx.real(3) / 4u32;
        for a in [ctx.real(3).sqrt(), ctx.real(7).sqrt(), ctx.real(2)] {
            let p = regulator_p_estimate(&a, &ctx).unwrap();
            assert_close(&p, &three_quarters, &ctx, "regulator exponent");
            // rounds to a multiple of 1/8, namely 6/8
            let eighth = (p.to_f64() * 8.0).round() as i64;
            assert_eq!(eighth, 6);
        }
    }
}
