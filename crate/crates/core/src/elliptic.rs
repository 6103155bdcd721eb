//! Jacobi elliptic primitives: quarter periods, the delta amplitude, and the
//! node map `xi` used by the analytic minimax solutions.
//!
//! All routines are parameterized by the gap parameter `lambda` in (0, 1),
//! which is the *complementary* modulus of the working modulus
//! `k = sqrt(1 - lambda^2)`. `k` is never formed explicitly: for small
//! `lambda` it would round to 1 and destroy the extreme node values. Instead,
//! `dn` is evaluated by descending Landen transformations expressed entirely
//! in complementary moduli, down to a trigonometric base case, and
//! reconstructed on the way back up. Every reconstruction step is a ratio of
//! sums of nonnegative terms, so relative accuracy survives down to
//! `lambda ~ 1e-300`.

use crate::error::{Error, Result};
use crate::real::Real;

/// Modulus threshold below which the trigonometric base case is accurate to
/// well below machine precision (corrections make the truncation O(k^4)).
const TRIG_MODULUS_THRESHOLD: f64 = 1e-8;

/// Gap parameter `lambda` with its logarithm kept at full precision.
///
/// The working modulus `k = sqrt(1 - lambda^2)` stays implicit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticModulus<F> {
    lambda: F,
    log_lambda: F,
}

impl<F: Real> EllipticModulus<F> {
    pub fn new(lambda: F) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(EllipticModulus { lambda, log_lambda: lambda.ln() })
    }

    #[inline]
    pub fn lambda(&self) -> F {
        self.lambda
    }

    #[inline]
    pub fn log_lambda(&self) -> F {
        self.log_lambda
    }
}

fn check_lambda<F: Real>(lambda: F) -> Result<()> {
    if !(lambda > F::zero() && lambda < F::one()) {
        return Err(Error::OutOfDomain {
            name: "lambda",
            value: lambda.as_f64(),
            expected: "(0, 1)",
        });
    }
    Ok(())
}

/// Arithmetic-geometric mean of `(a, b)` with `a >= b > 0`.
///
/// Returns the mean and the number of iterations taken; quadratic convergence
/// keeps the count small even for `b = 1e-300`.
pub(crate) fn agm<F: Real>(mut a: F, mut b: F) -> (F, u32) {
    let mut iters = 0u32;
    while (a - b).abs() > F::epsilon() * a && iters < 64 {
        let an = (a + b) * F::of(0.5);
        b = (a * b).sqrt();
        a = an;
        iters += 1;
    }
    ((a + b) * F::of(0.5), iters)
}

/// Complete elliptic integrals `K(lambda)` and `K'(lambda) = K(sqrt(1-lambda^2))`.
///
/// Both are computed by the AGM; `K'` directly from `lambda` so that nothing
/// ever forms `1 - lambda^2`.
pub fn complete_k<F: Real>(lambda: F) -> Result<(F, F)> {
    check_lambda(lambda)?;
    let half_pi = F::of(std::f64::consts::FRAC_PI_2);
    // complement of lambda as a modulus, computed cancellation-free
    let kc = ((F::one() - lambda) * (F::one() + lambda)).sqrt();
    let k = half_pi / agm(F::one(), kc).0;
    let kp = half_pi / agm(F::one(), lambda).0;
    Ok((k, kp))
}

/// One level of the descending Landen recursion.
#[derive(Clone, Copy, Debug)]
struct LandenLevel<F> {
    /// Modulus at this level.
    modulus: F,
    /// Complement of the *parent* level's modulus; drives the reconstruction.
    parent_comp: F,
}

/// Full descent from complementary modulus `kc0` down to a tiny modulus.
struct LandenChain<F> {
    levels: Vec<LandenLevel<F>>,
    base_modulus: F,
    base_comp: F,
    base_quarter: F,
}

impl<F: Real> LandenChain<F> {
    fn descend(kc0: F, modulus_threshold: F) -> Self {
        let mut levels = Vec::new();
        let mut kc = kc0;
        loop {
            let k1 = (F::one() - kc) / (F::one() + kc);
            let kc1 = F::of(2.0) * kc.sqrt() / (F::one() + kc);
            levels.push(LandenLevel { modulus: k1, parent_comp: kc });
            kc = kc1;
            if k1 <= modulus_threshold || levels.len() >= 64 {
                break;
            }
        }
        let base = levels.last().expect("descent always produces a level");
        let k = base.modulus;
        let ksq = k * k;
        // K(k) = pi/2 (1 + k^2/4 (1 + 9 k^2 / 16) + ...) for tiny k
        let base_quarter = F::of(std::f64::consts::FRAC_PI_2)
            * (F::one() + ksq * F::of(0.25) * (F::one() + ksq * F::of(9.0 / 16.0)));
        let base_comp = F::of(2.0) * base.parent_comp.sqrt() / (F::one() + base.parent_comp);
        LandenChain { levels, base_modulus: k, base_comp, base_quarter }
    }

    /// Product of (1 + k_m) over the chain; relates top and base quarter periods.
    fn period_scale(&self) -> F {
        let mut p = F::one();
        for lvl in &self.levels {
            p = p * (F::one() + lvl.modulus);
        }
        p
    }

    /// Quarter period `K(k0) = K'(lambda)` consistent with this chain.
    fn quarter_period(&self) -> F {
        self.base_quarter * self.period_scale()
    }

    /// Evaluates `(sn, cn, dn, 1 - dn)` of the top-level modulus at the
    /// argument `K - w`, given the distance `w >= 0` from the quarter period
    /// *at base scale* (`w_base = w_top / period_scale`).
    fn triple_from_quarter_distance(&self, w_base: F) -> (F, F, F, F) {
        // base case: K - w identities with trig-accurate sn, cn, dn at w
        let k = self.base_modulus;
        let u = w_base;
        let (sin_u, cos_u) = (u.sin(), u.cos());
        let corr = F::of(0.25) * k * k * (u - sin_u * cos_u);
        let sn_w = sin_u - corr * cos_u;
        let cn_w = cos_u + corr * sin_u;
        let dn_w = F::one() - F::of(0.5) * k * k * sin_u * sin_u;
        let kc = self.base_comp;
        let mut s = cn_w / dn_w; // sn(K - w) = cd(w)
        let mut c = kc * sn_w / dn_w; // cn(K - w) = kc sd(w)
        let mut d = kc / dn_w; // dn(K - w) = kc nd(w)
        // overwritten on the first reconstruction step (the chain is never
        // empty); kept as the literal complement for safety
        let mut one_minus_d = (dn_w - kc) / dn_w;
        for lvl in self.levels.iter().rev() {
            let kcp = lvl.parent_comp;
            let g = F::one() + s * s + kcp * c * c;
            let s0 = F::of(2.0) * s / g;
            let c0 = (F::one() + kcp) * c * d / g;
            let d0 = (c * c + kcp * (F::one() + s * s)) / g;
            // exact complement: g - numerator(d0) = 2 s^2 (1 - kcp)
            one_minus_d = F::of(2.0) * s * s * (F::one() - kcp) / g;
            s = s0;
            c = c0;
            d = d0;
        }
        (s, c, d, one_minus_d)
    }
}

/// Delta amplitude `dn(u, k)` for the implicit modulus `k = sqrt(1-lambda^2)`,
/// restricted to `u` in `[0, K(k)]` (the range the node map needs).
pub fn jacobi_dn<F: Real>(u: F, lambda: F) -> Result<F> {
    check_lambda(lambda)?;
    let chain = LandenChain::descend(lambda, F::of(TRIG_MODULUS_THRESHOLD));
    let big_k = chain.quarter_period();
    let slack = F::of(64.0) * F::epsilon() * big_k.max(F::one());
    if u < -slack || u > big_k + slack {
        return Err(Error::OutOfDomain {
            name: "u",
            value: u.as_f64(),
            expected: "[0, K(k)]",
        });
    }
    let w_top = (big_k - u).max(F::zero());
    let w_base = w_top / chain.period_scale();
    Ok(chain.triple_from_quarter_distance(w_base).2)
}

/// Node map `xi(v) = dn((1 - v) K(k), k)`, strictly increasing from
/// `xi(0) = lambda` to `xi(1) = 1`.
pub fn xi<F: Real>(v: F, lambda: F) -> Result<F> {
    Ok(xi_pair(v, lambda)?.0)
}

/// `(xi(v), 1 - xi(v))`, both to full relative accuracy.
///
/// The complement matters when `lambda` is close to 1 and `xi` hugs 1: node
/// products like `(1 - x) / (1 + x)` would otherwise lose the leading digits.
pub fn xi_pair<F: Real>(v: F, lambda: F) -> Result<(F, F)> {
    check_lambda(lambda)?;
    if !(v >= F::zero() && v <= F::one()) {
        return Err(Error::OutOfDomain { name: "v", value: v.as_f64(), expected: "[0, 1]" });
    }
    if v == F::zero() {
        return Ok((lambda, F::one() - lambda));
    }
    if v == F::one() {
        return Ok((F::one(), F::zero()));
    }
    let chain = LandenChain::descend(lambda, F::of(TRIG_MODULUS_THRESHOLD));
    let w_base = v * chain.base_quarter;
    let (_, _, d, one_minus_d) = chain.triple_from_quarter_distance(w_base);
    Ok((d, one_minus_d))
}

/// `log(xi(v))`, exact in the exponent even where a downstream product of
/// `xi` values would underflow.
pub fn xi_log<F: Real>(v: F, lambda: F) -> Result<F> {
    Ok(xi(v, lambda)?.ln())
}

/// Inverse of the node map on `[lambda, 1]`: returns `v` with `xi(v) = z`.
///
/// Monotone bisection brackets the root, then Newton steps (safeguarded to
/// the bracket) polish it using `d(dn)/du = -k^2 sn cn` expressed through
/// `dn` alone.
pub fn xi_inverse<F: Real>(z: F, lambda: F) -> Result<F> {
    check_lambda(lambda)?;
    let slack = F::of(64.0) * F::epsilon();
    if z < lambda * (F::one() - slack) || z > F::one() + slack {
        return Err(Error::OutOfDomain {
            name: "z",
            value: z.as_f64(),
            expected: "[lambda, 1]",
        });
    }
    if z <= lambda {
        return Ok(F::zero());
    }
    if z >= F::one() {
        return Ok(F::one());
    }
    let (_, kp) = complete_k(lambda)?;
    let mut lo = F::zero();
    let mut hi = F::one();
    // bisection to a coarse bracket
    for _ in 0..12 {
        let mid = (lo + hi) * F::of(0.5);
        if xi(mid, lambda)? < z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Newton with bracket safeguard
    let mut v = (lo + hi) * F::of(0.5);
    for _ in 0..40 {
        let (x, xc) = xi_pair(v, lambda)?;
        if x < z {
            lo = lo.max(v);
        } else {
            hi = hi.min(v);
        }
        // xi'(v) = K' sqrt((1-x)(1+x)(x-lambda)(x+lambda))
        let deriv = kp * (xc * (F::one() + x) * (x - lambda).max(F::zero()) * (x + lambda)).sqrt();
        let mut next = if deriv > F::zero() { v - (x - z) / deriv } else { (lo + hi) * F::of(0.5) };
        if !(next > lo && next < hi) {
            next = (lo + hi) * F::of(0.5);
        }
        if (next - v).abs() <= F::of(2.0) * F::epsilon() * v.max(F::of(0.25)) {
            return Ok(next);
        }
        v = next;
        if hi - lo <= F::of(2.0) * F::epsilon() {
            break;
        }
    }
    Ok((lo + hi) * F::of(0.5))
}

/// The two decay moduli of the sharp bounds on `Z_n(lambda)`.
#[derive(Clone, Copy, Debug)]
pub struct Moduli<F> {
    /// `rho = exp(pi K / K')`; saturates to infinity when the log overflows it.
    pub rho: F,
    /// `rho_tilde = exp((pi^2/2) / log(4/lambda))`, the small-`lambda` asymptote.
    pub rho_tilde: F,
    pub log_rho: F,
    pub log_rho_tilde: F,
}

/// Computes `rho` and `rho_tilde`; the logs are the authoritative values.
pub fn moduli_rho<F: Real>(lambda: F) -> Result<Moduli<F>> {
    let (k, kp) = complete_k(lambda)?;
    let log_rho = F::of(std::f64::consts::PI) * k / kp;
    let log_rho_tilde = F::of(std::f64::consts::PI * std::f64::consts::PI / 2.0)
        / (F::of(4.0).ln() - lambda.ln());
    Ok(Moduli {
        rho: log_rho.exp(),
        rho_tilde: log_rho_tilde.exp(),
        log_rho,
        log_rho_tilde,
    })
}
