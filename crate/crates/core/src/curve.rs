//! The Weierstrass model `Y^2 = X(X^2 + (c^2/4 - 1 - a^2)X + a^2)` of the
//! curve `P_{a,c}(x,y) = 0`, coordinate transformations, the chord-tangent
//! group law over complex coordinates, named (torsion) points, the degree-2
//! isogeny onto the `P_{1,k}` model, symbolic divisors with the diamond
//! pairing, and numerically verified tame-symbol magnitudes.

use std::collections::BTreeMap;

use rug::{Complex, Float};

use crate::precision::PrecisionContext;
use crate::{Error, Real, Result};

/// `Y^2 = X^3 + a2 X^2 + a4 X` (the family model has `a6 = 0`).
#[derive(Clone, Debug)]
pub struct WeierstrassCurve {
    pub coeff_a2: Real,
    pub coeff_a4: Real,
}

/// A point on a [`WeierstrassCurve`], with complex coordinates permitted.
#[derive(Clone, Debug)]
pub enum CurvePoint {
    Affine { x: Complex, y: Complex },
    Infinity,
}

impl CurvePoint {
    pub fn affine(x: Complex, y: Complex) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    /// Coordinate-wise agreement within `tol` (infinity only equals infinity).
    pub fn approx_eq(&self, other: &CurvePoint, tol: &Real) -> bool {
        match (self, other) {
            (CurvePoint::Infinity, CurvePoint::Infinity) => true,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                let w = x1.prec().0;
                let dx = Complex::with_val(w, x1 - x2).abs();
                let dy = Complex::with_val(w, y1 - y2).abs();
                dx.real() < tol && dy.real() < tol
            }
            _ => false,
        }
    }
}

/// Comparison tolerance for point identity: `10^(-target_digits/2)`.
fn eq_tol(ctx: &PrecisionContext) -> Real {
    ctx.pow10(-(ctx.target_digits() as i32) / 2)
}

impl WeierstrassCurve {
    /// The model of `P_{a,c}(x,y) = 0`: `a2 = c^2/4 - 1 - a^2`, `a4 = a^2`.
    pub fn from_family(a: &Real, c: &Real, ctx: &PrecisionContext) -> Result<Self> {
        if a.is_zero() || !a.is_finite() || !c.is_finite() {
            return Err(Error::DomainError("need finite a != 0, finite c".into()));
        }
        let a2v = ctx.real(a.clone().square());
        let coeff_a2 = ctx.real(c.clone().square()) / 4u32 - 1u32 - &a2v;
        let coeff_a4 = a2v;
        Self::from_coeffs(coeff_a2, coeff_a4, ctx)
    }

    /// A general `Y^2 = X^3 + a2 X^2 + a4 X` model (used for the isogeny
    /// target); rejects singular cubics.
    pub fn from_coeffs(coeff_a2: Real, coeff_a4: Real, ctx: &PrecisionContext) -> Result<Self> {
        // X = 0 is a root of the cubic; nonsingularity needs the other two
        // roots distinct and nonzero.
        let disc = ctx.real(coeff_a2.clone().square()) - ctx.real(4) * &coeff_a4;
        if coeff_a4.is_zero() || disc.is_zero() {
            return Err(Error::DomainError(
                "singular cubic: repeated or zero root".into(),
            ));
        }
        Ok(WeierstrassCurve { coeff_a2, coeff_a4 })
    }

    /// Right-hand side `X^3 + a2 X^2 + a4 X`.
    pub fn rhs(&self, x: &Complex) -> Complex {
        let w = x.prec().0;
        let x2 = Complex::with_val(w, x.clone().square());
        Complex::with_val(w, &x2 * x)
            + Complex::with_val(w, &x2) * &self.coeff_a2
            + Complex::with_val(w, x) * &self.coeff_a4
    }

    /// `|Y^2 - rhs(X)|`, zero for on-curve points.
    pub fn residual(&self, pt: &CurvePoint) -> Real {
        match pt {
            CurvePoint::Infinity => Float::new(53),
            CurvePoint::Affine { x, y } => {
                let w = x.prec().0;
                let r = Complex::with_val(w, y.clone().square()) - self.rhs(x);
                r.abs().real().clone()
            }
        }
    }

    /// A point with the given `X` and `Y = sqrt(rhs(X))` (principal branch).
    pub fn lift_x(&self, x: Complex) -> CurvePoint {
        let y = self.rhs(&x).sqrt();
        CurvePoint::Affine { x, y }
    }

    pub fn negate(&self, pt: &CurvePoint) -> CurvePoint {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: -y.clone(),
            },
        }
    }

    /// Chord-tangent addition; point identity is decided within
    /// `10^(-target_digits/2)`.
    pub fn add(&self, p1: &CurvePoint, p2: &CurvePoint, ctx: &PrecisionContext) -> CurvePoint {
        let tol = eq_tol(ctx);
        let (x1, y1, x2, y2) = match (p1, p2) {
            (CurvePoint::Infinity, _) => return p2.clone(),
            (_, CurvePoint::Infinity) => return p1.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let w = ctx.work_bits();
        let dx = Complex::with_val(w, x2 - x1).abs();
        let lambda = if dx.real() < &tol {
            // same X: either inverse pair or tangent
            let ysum = Complex::with_val(w, y1 + y2).abs();
            if ysum.real() < &tol {
                return CurvePoint::Infinity;
            }
            let num = Complex::with_val(w, x1.clone().square()) * 3u32
                + Complex::with_val(w, x1 * 2u32) * &self.coeff_a2
                + &self.coeff_a4;
            num / Complex::with_val(w, y1 * 2u32)
        } else {
            Complex::with_val(w, y2 - y1) / Complex::with_val(w, x2 - x1)
        };
        let x3 = Complex::with_val(w, lambda.clone().square()) - &self.coeff_a2 - x1 - x2;
        let y3 = lambda * Complex::with_val(w, x1 - &x3) - y1;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    /// `n * pt` by double-and-add (negative `n` via the inverse).
    pub fn scalar_mul(&self, n: i64, pt: &CurvePoint, ctx: &PrecisionContext) -> CurvePoint {
        if n == 0 {
            return CurvePoint::Infinity;
        }
        let (mut k, base) = if n < 0 {
            ((-n) as u64, self.negate(pt))
        } else {
            (n as u64, pt.clone())
        };
        let mut acc = CurvePoint::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pow, ctx);
            }
            pow = self.add(&pow, &pow, ctx);
            k >>= 1;
        }
        acc
    }

    /// Least `n <= bound` with `n * pt = O` within tolerance, if any.
    pub fn torsion_order(&self, pt: &CurvePoint, bound: u32, ctx: &PrecisionContext) -> Option<u32> {
        let tol = eq_tol(ctx);
        let mut acc = pt.clone();
        for n in 1..=bound {
            if acc.is_infinity() {
                return Some(n);
            }
            // detect "about to cancel": acc == -pt would make acc+pt ill-conditioned,
            // but add() resolves that to O via the tolerance check
            let _ = &tol;
            acc = self.add(&acc, pt, ctx);
        }
        if acc.is_infinity() {
            return Some(bound);
        }
        None
    }
}

/// `(x, y) -> (X, Y) = (-a/(xy), (a/(2xy))(y - 1/y - a(x - 1/x)))`.
pub fn to_weierstrass(
    x: &Complex,
    y: &Complex,
    a: &Real,
    ctx: &PrecisionContext,
) -> Result<CurvePoint> {
    let w = ctx.work_bits();
    let xy = Complex::with_val(w, x * y);
    if xy.clone().abs().real().is_zero() {
        return Err(Error::DomainError("x*y = 0 maps to infinity".into()));
    }
    let xx = Complex::with_val(w, -Complex::with_val(w, a) / &xy);
    let bracket = Complex::with_val(w, y - &Complex::with_val(w, y.clone().recip()))
        - Complex::with_val(w, x - &Complex::with_val(w, x.clone().recip())) * a;
    let yy = Complex::with_val(w, a) / (xy * 2u32) * bracket;
    Ok(CurvePoint::Affine { x: xx, y: yy })
}

/// Inverse transformation `x = a(cX-2Y)/(2X(X-a^2))`, `y = (cX+2Y)/(2X(X-1))`.
///
/// Errors at the excluded set `X in {0, 1, a^2}` and at infinity, where the
/// maps degenerate to the labeled points.
pub fn from_weierstrass(
    pt: &CurvePoint,
    a: &Real,
    c: &Real,
    ctx: &PrecisionContext,
) -> Result<(Complex, Complex)> {
    let (xx, yy) = match pt {
        CurvePoint::Infinity => {
            return Err(Error::DomainError("infinity is an excluded point".into()))
        }
        CurvePoint::Affine { x, y } => (x, y),
    };
    let w = ctx.work_bits();
    // only essentially-exact hits are excluded; limit paths may come very close
    let tol = ctx.pow10(-2 * ctx.target_digits() as i32);
    let a2 = ctx.real(a.clone().square());
    for excluded in [ctx.real(0), ctx.real(1), a2.clone()] {
        let d = Complex::with_val(w, xx - &Complex::with_val(w, &excluded)).abs();
        if d.real() < &tol {
            return Err(Error::DomainError(format!(
                "X = {} is in the excluded set {{0, 1, a^2}}",
                excluded
            )));
        }
    }
    let cx = Complex::with_val(w, xx.clone() * c);
    let two_y = Complex::with_val(w, yy * 2u32);
    let x = Complex::with_val(w, &cx - &two_y) * a
        / (Complex::with_val(w, xx * 2u32) * Complex::with_val(w, xx.clone() - &a2));
    let y = Complex::with_val(w, &cx + &two_y)
        / (Complex::with_val(w, xx * 2u32) * Complex::with_val(w, xx.clone() - 1u32));
    Ok((x, y))
}

/// The named points of the family model: `P = (1, c/2)`, `Q = (a^2, c a^2/2)`
/// and the angle points `S_+-`, `T_+-` (complex coordinates when the defining
/// radicals are imaginary, with `real` flags exposing which case holds).
#[derive(Clone, Debug)]
pub struct NamedPoints {
    pub p: CurvePoint,
    pub q: CurvePoint,
    pub s_plus: CurvePoint,
    pub s_minus: CurvePoint,
    pub t_plus: CurvePoint,
    pub t_minus: CurvePoint,
    /// whether the radical `(1-c/2)^2 - a^2` is nonnegative
    pub s_real: bool,
    /// whether the radical `(1+c/2)^2 - a^2` is nonnegative
    pub t_real: bool,
}

/// Construct the named points on the Weierstrass model of `P_{a,c}`.
///
/// With `require_real`, errors with [`Error::RegionError`] when a radical is
/// imaginary.
pub fn named_points(
    a: &Real,
    c: &Real,
    require_real: bool,
    ctx: &PrecisionContext,
) -> Result<NamedPoints> {
    let w = ctx.work_bits();
    let a2 = ctx.real(a.clone().square());
    let half_c = ctx.real(c / 2u32);
    let p = CurvePoint::affine(
        ctx.complex(1),
        Complex::with_val(w, &half_c),
    );
    let q = CurvePoint::affine(
        Complex::with_val(w, &a2),
        Complex::with_val(w, &half_c) * &a2,
    );

    // S_+- = (1 - c/2 -+ s, +-s(1 - c/2 -+ s)), s = sqrt((1-c/2)^2 - a^2)
    let s_base = ctx.real(1) - &half_c;
    let s_rad = ctx.real(s_base.clone().square()) - &a2;
    let s_real = s_rad >= 0;
    // T_+- = (1 + c/2 +- t, +-t(1 + c/2 +- t)), t = sqrt((1+c/2)^2 - a^2)
    let t_base = ctx.real(1) + &half_c;
    let t_rad = ctx.real(t_base.clone().square()) - &a2;
    let t_real = t_rad >= 0;
    if require_real && !(s_real && t_real) {
        return Err(Error::RegionError(format!(
            "radicals imaginary: (1-c/2)^2-a^2 = {}, (1+c/2)^2-a^2 = {}",
            s_rad, t_rad
        )));
    }
    let s = Complex::with_val(w, &s_rad).sqrt();
    let t = Complex::with_val(w, &t_rad).sqrt();

    let sx_plus = Complex::with_val(w, &s_base) - &s;
    let sx_minus = Complex::with_val(w, &s_base) + &s;
    let s_plus = CurvePoint::affine(sx_plus.clone(), Complex::with_val(w, &s * &sx_plus));
    let s_minus = CurvePoint::affine(
        sx_minus.clone(),
        -Complex::with_val(w, &s * &sx_minus),
    );

    let tx_plus = Complex::with_val(w, &t_base) + &t;
    let tx_minus = Complex::with_val(w, &t_base) - &t;
    let t_plus = CurvePoint::affine(tx_plus.clone(), Complex::with_val(w, &t * &tx_plus));
    let t_minus = CurvePoint::affine(
        tx_minus.clone(),
        -Complex::with_val(w, &t * &tx_minus),
    );

    Ok(NamedPoints {
        p,
        q,
        s_plus,
        s_minus,
        t_plus,
        t_minus,
        s_real,
        t_real,
    })
}

/// The degree-2 isogeny of the constrained model (`c^2 = 2(a^2-1)^2/(a^2+1)`)
/// onto `Y'^2 = X'(X'^2 + 2(a^4-6a^2+1)/(a^2+1)^2 X' + 1)`, the model of
/// `P_{1,k}` with `k = 4(a^2-1)/(a^2+1)`.
pub fn isogeny_phi(pt: &CurvePoint, a: &Real, ctx: &PrecisionContext) -> Result<CurvePoint> {
    let (xx, yy) = match pt {
        CurvePoint::Infinity => return Ok(CurvePoint::Infinity),
        CurvePoint::Affine { x, y } => (x, y),
    };
    let w = ctx.work_bits();
    let a2 = ctx.real(a.clone().square());
    let a2p1 = ctx.real(&a2 + 1u32);
    let den = Complex::with_val(w, xx.clone() * &a2p1) - Complex::with_val(w, &a2) * 2u32;
    if den.clone().abs().real() < &eq_tol(ctx) {
        return Err(Error::KernelPoint);
    }
    let den2 = Complex::with_val(w, den.square());
    let y2 = Complex::with_val(w, yy.clone().square());
    let x_im = Complex::with_val(w, y2 * &a2p1) * 2u32 / &den2;
    let corr = Complex::with_val(w, 1)
        + Complex::with_val(
            w,
            &(ctx.real(&a2) * ctx.real((a2.clone() - 1u32).square())),
        ) / &den2;
    let scale = ctx.real(2).sqrt() * ctx.real(2) / ctx.real(a2p1.clone() * a2p1.clone().sqrt());
    let y_im = Complex::with_val(w, yy * &scale) * corr;
    Ok(CurvePoint::Affine { x: x_im, y: y_im })
}

/// The isogeny target curve `Y'^2 = X'(X'^2 + 2(a^4-6a^2+1)/(a^2+1)^2 X' + 1)`.
pub fn isogeny_target(a: &Real, ctx: &PrecisionContext) -> Result<WeierstrassCurve> {
    let a2 = ctx.real(a.clone().square());
    let num = ctx.real(a2.clone().square()) - ctx.real(6) * &a2 + 1u32;
    let coeff = ctx.real(2) * num / ctx.real((a2.clone() + 1u32).square());
    WeierstrassCurve::from_coeffs(coeff, ctx.real(1), ctx)
}

// ---------------------------------------------------------------------------
// Divisors and the diamond pairing (symbolic)
// ---------------------------------------------------------------------------

/// A divisor supported on the subgroup generated by `P` and `Q`, written with
/// labels `(m, n) = m P + n Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub terms: BTreeMap<(i64, i64), i64>,
}

impl Divisor {
    pub fn new(entries: &[((i64, i64), i64)]) -> Self {
        let mut terms = BTreeMap::new();
        for &(label, mult) in entries {
            *terms.entry(label).or_insert(0) += mult;
        }
        terms.retain(|_, m| *m != 0);
        Divisor { terms }
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }
}

/// An element of the class group `Z[E(C)]^-` over the generic torsion
/// structure of `<P, Q>` (only relation: `2(P+Q) = O`). Points are reduced to
/// `(d, e) = ((m-n), n mod 2)`; negation fixes `e` and flips `d`, so classes
/// with `d = 0` are 2-torsion and carry multiplicities mod 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamondClass {
    pub terms: BTreeMap<(i64, u8), i64>,
}

impl DiamondClass {
    fn insert(terms: &mut BTreeMap<(i64, u8), i64>, m: i64, n: i64, mult: i64) {
        let d = m - n;
        let e = (n.rem_euclid(2)) as u8;
        let (key, signed) = if d < 0 { ((-d, e), -mult) } else { ((d, e), mult) };
        *terms.entry(key).or_insert(0) += signed;
    }

    fn normalize(mut terms: BTreeMap<(i64, u8), i64>) -> Self {
        for ((d, _), m) in terms.iter_mut() {
            if *d == 0 {
                *m = m.rem_euclid(2);
            }
        }
        terms.retain(|_, m| *m != 0);
        DiamondClass { terms }
    }

    /// Canonical class of a plain divisor.
    pub fn from_divisor(div: &Divisor) -> Self {
        let mut terms = BTreeMap::new();
        for (&(m, n), &mult) in &div.terms {
            Self::insert(&mut terms, m, n, mult);
        }
        Self::normalize(terms)
    }

    /// `(f) diamond (g) = sum m_i n_j (a_i - b_j)`.
    pub fn diamond(f: &Divisor, g: &Divisor) -> Self {
        let mut terms = BTreeMap::new();
        for (&(m1, n1), &mu) in &f.terms {
            for (&(m2, n2), &nu) in &g.terms {
                Self::insert(&mut terms, m1 - m2, n1 - n2, mu * nu);
            }
        }
        Self::normalize(terms)
    }

    pub fn scaled(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|(&l, &m)| (l, m * k)).collect();
        Self::normalize(terms)
    }
}

/// The divisors `(x) = -(P+Q)+(P)-(-Q)+O`, `(y) = -(P+Q)-(P)+(-Q)+O` and
/// their diamond `(x) diamond (y) = 4(P) + 4(Q)`.
pub fn divisors_and_diamond() -> (Divisor, Divisor, DiamondClass) {
    let div_x = Divisor::new(&[((1, 1), -1), ((1, 0), 1), ((0, -1), -1), ((0, 0), 1)]);
    let div_y = Divisor::new(&[((1, 1), -1), ((1, 0), -1), ((0, -1), 1), ((0, 0), 1)]);
    let diamond = DiamondClass::diamond(&div_x, &div_y);
    (div_x, div_y, diamond)
}

/// Class arithmetic in the constrained torsion group `Z/8 x Z/2` (generated
/// by `S` of order 8 with `P = 2S`, and the 2-torsion `P+Q`), used for the
/// isogeny pullback identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamondClass8 {
    pub terms: BTreeMap<(u8, u8), i64>,
}

impl DiamondClass8 {
    fn insert(terms: &mut BTreeMap<(u8, u8), i64>, s: i64, e: i64, mult: i64) {
        let s = s.rem_euclid(8) as u8;
        let e = e.rem_euclid(2) as u8;
        let (key, signed) = if s > 4 { ((8 - s, e), -mult) } else { ((s, e), mult) };
        *terms.entry(key).or_insert(0) += signed;
    }

    fn normalize(mut terms: BTreeMap<(u8, u8), i64>) -> Self {
        for (&(s, _), m) in terms.iter_mut() {
            if s == 0 || s == 4 {
                *m = m.rem_euclid(2);
            }
        }
        terms.retain(|_, m| *m != 0);
        DiamondClass8 { terms }
    }

    fn diamond(f: &[((i64, i64), i64)], g: &[((i64, i64), i64)]) -> Self {
        let mut terms = BTreeMap::new();
        for &((s1, e1), mu) in f {
            for &((s2, e2), nu) in g {
                Self::insert(&mut terms, s1 - s2, e1 - e2, mu * nu);
            }
        }
        Self::normalize(terms)
    }

    fn from_entries(entries: &[((i64, i64), i64)]) -> Self {
        let mut terms = BTreeMap::new();
        for &((s, e), m) in entries {
            Self::insert(&mut terms, s, e, m);
        }
        Self::normalize(terms)
    }
}

/// The isogeny-pullback diamond identity in the constrained torsion group:
/// returns `((x' o phi) diamond (y' o phi), 4 (x) diamond (y))`, which are
/// equal (`= 16(P) + 16(Q)`).
///
/// Under the constraint the subgroup is `Z/8 x Z/2 = <S> x <P+Q>` with
/// `P = 2S`, `Q = -2S + (P+Q)`, and the kernel of the isogeny is
/// `{O, (2a^2/(a^2+1), 0) = 4S + (P+Q)}`. The divisors of `x'`, `y'` on the
/// target (where `P' = Q'`) pull back through the two-element fibers.
pub fn pullback_diamond_check() -> (DiamondClass8, DiamondClass8) {
    // labels (s, e): s coefficient of S mod 8, e coefficient of (P+Q) mod 2
    let p = (2, 0);
    let q = (-2, 1);
    let pq = (0, 1); // P + Q
    let two_p = (4, 0);
    let kernel = (4, 1);
    let o = (0, 0);

    // (x') = -(2P') + (P') - (-P') + O' on the target (a = 1 there, P' = Q');
    // each target point pulls back to its two preimages.
    let pull_x = [
        (two_p, -1),
        (pq, -1), // preimages of 2P' = phi(2P): {2P, 2P + kernel = P+Q}
        (p, 1),
        (q, 1), // preimages of P': {P, Q}
        ((-2, 0), -1),
        ((2, 1), -1), // preimages of -P': {-P, -Q}
        (o, 1),
        (kernel, 1), // preimages of O': the kernel
    ];
    let pull_y = [
        (two_p, -1),
        (pq, -1),
        (p, -1),
        (q, -1),
        ((-2, 0), 1),
        ((2, 1), 1),
        (o, 1),
        (kernel, 1),
    ];
    let pull_x: Vec<((i64, i64), i64)> = pull_x.to_vec();
    let pull_y: Vec<((i64, i64), i64)> = pull_y.to_vec();
    let pullback = DiamondClass8::diamond(&pull_x, &pull_y);

    // (x), (y) on the source in the same coordinates
    let div_x: Vec<((i64, i64), i64)> = vec![(pq, -1), (p, 1), ((2, 1), -1), (o, 1)];
    let div_y: Vec<((i64, i64), i64)> = vec![(pq, -1), (p, -1), ((2, 1), 1), (o, 1)];
    let base = DiamondClass8::diamond(&div_x, &div_y);
    let four_base = DiamondClass8::from_entries(
        &base
            .terms
            .iter()
            .map(|(&(s, e), &m)| ((s as i64, e as i64), 4 * m))
            .collect::<Vec<_>>(),
    );
    (pullback, four_base)
}

// ---------------------------------------------------------------------------
// Tame symbols
// ---------------------------------------------------------------------------

/// Magnitudes of the nontrivial tame symbols of `{x, y}` on `E_{a,c}`,
/// each obtained numerically by evaluating the defining quotient along a
/// limiting path on the curve (Richardson-extrapolated).
#[derive(Clone, Debug)]
pub struct TameSymbols {
    /// `|(x,y)_P| = 1/a`
    pub at_p: Real,
    /// `|(x,y)_{-Q}| = 1/a`
    pub at_minus_q: Real,
    /// `|(x,y)_{P+Q}| = a`
    pub at_p_plus_q: Real,
    /// `|(x,y)_O| = a`
    pub at_o: Real,
}

impl TameSymbols {
    /// Magnitudes for the rescaled symbol `{a x, y}`: multiplies each value
    /// by `a^(v(y))` with `v(y) = -1, +1, -1, +1` at `P, -Q, P+Q, O`.
    pub fn x0_variant(&self, a: &Real, ctx: &PrecisionContext) -> TameSymbols {
        TameSymbols {
            at_p: ctx.real(&self.at_p / a),
            at_minus_q: ctx.real(&self.at_minus_q * a),
            at_p_plus_q: ctx.real(&self.at_p_plus_q / a),
            at_o: ctx.real(&self.at_o * a),
        }
    }
}

/// Evaluate `g` at parameter values `h` and `h/100` and Richardson-extrapolate
/// assuming an error linear in the parameter.
fn richardson(g: impl Fn(&Real) -> Real, h: &Real, ctx: &PrecisionContext) -> Real {
    let h1 = h.clone();
    let h2 = ctx.real(h / 100u32);
    let g1 = g(&h1);
    let g2 = g(&h2);
    (ctx.real(&h1) * &g2 - ctx.real(&h2) * &g1) / (h1 - h2)
}

/// Numerically verified tame-symbol magnitudes at `(a, c)` (Lemma-style
/// limits along the curve with step `10^-6`, Richardson-extrapolated).
pub fn tame_symbol_magnitudes(a: &Real, c: &Real, ctx: &PrecisionContext) -> Result<TameSymbols> {
    let curve = WeierstrassCurve::from_family(a, c, ctx)?;
    let w = ctx.work_bits();
    let a2 = ctx.real(a.clone().square());
    let h = ctx.pow10(-6);

    // |(x,y)_P| = |1/(xy)| at P = (1, c/2): approach along X = 1 + eps
    let at_p = richardson(
        |eps| {
            let x = Complex::with_val(w, ctx.real(1) + eps);
            let pt = curve.lift_x(x);
            let (xc, yc) = from_weierstrass(&pt, a, c, ctx).expect("off excluded set");
            Complex::with_val(w, xc * yc).abs().real().clone().recip()
        },
        &h,
        ctx,
    );

    // |(x,y)_{-Q}| = |xy| at -Q = (a^2, -c a^2/2): X = a^2 + eps, lower branch
    let at_minus_q = richardson(
        |eps| {
            let x = Complex::with_val(w, ctx.real(&a2) + eps);
            let pt = curve.lift_x(x);
            let pt = curve.negate(&pt); // lower branch, Y < 0
            let (xc, yc) = from_weierstrass(&pt, a, c, ctx).expect("off excluded set");
            Complex::with_val(w, xc * yc).abs().real().clone()
        },
        &h,
        ctx,
    );

    // |(x,y)_{P+Q}| = |y/x| at (0,0): approach X = eps^2 so the branch
    // parameter eps is the uniformizer
    let at_p_plus_q = richardson(
        |eps| {
            let x = Complex::with_val(w, ctx.real(eps.clone().square()));
            let pt = curve.lift_x(x);
            let (xc, yc) = from_weierstrass(&pt, a, c, ctx).expect("off excluded set");
            (Complex::with_val(w, &yc / &xc)).abs().real().clone()
        },
        &h,
        ctx,
    );

    // |(x,y)_O| = |x/y| at infinity: approach X = 1/eps^2
    let at_o = richardson(
        |eps| {
            let x = Complex::with_val(w, ctx.real(eps.clone().square()).recip());
            let pt = curve.lift_x(x);
            let (xc, yc) = from_weierstrass(&pt, a, c, ctx).expect("off excluded set");
            (Complex::with_val(w, &xc / &yc)).abs().real().clone()
        },
        &h,
        ctx,
    );

    Ok(TameSymbols {
        at_p,
        at_minus_q,
        at_p_plus_q,
        at_o,
    })
}
