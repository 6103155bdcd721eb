//! Real approximation domains, their separation validation, and the Mobius
//! normalization onto `[lambda, 1] x [-1, -lambda]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// A compact subset of the real line: a finite union of closed intervals or a
/// finite ordered point set.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain<F> {
    /// Sorted, pairwise disjoint closed intervals `[a, b]` with `a <= b`.
    IntervalUnion(Vec<(F, F)>),
    /// Strictly increasing points.
    PointSet(Vec<F>),
}

impl<F: Real> Domain<F> {
    pub fn interval_union(mut intervals: Vec<(F, F)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidDomain("empty interval union".into()));
        }
        intervals.sort_by(|l, r| l.0.partial_cmp(&r.0).unwrap());
        for (a, b) in &intervals {
            if !(a.is_finite() && b.is_finite()) || a > b {
                return Err(Error::InvalidDomain(format!(
                    "bad interval [{:e}, {:e}]",
                    a.as_f64(),
                    b.as_f64()
                )));
            }
        }
        for w in intervals.windows(2) {
            if w[0].1 >= w[1].0 {
                return Err(Error::InvalidDomain("overlapping intervals".into()));
            }
        }
        Ok(Domain::IntervalUnion(intervals))
    }

    /// Single closed interval `[a, b]`.
    pub fn interval(a: F, b: F) -> Result<Self> {
        Self::interval_union(vec![(a, b)])
    }

    pub fn point_set(mut points: Vec<F>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDomain("empty point set".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidDomain("non-finite point".into()));
        }
        points.sort_by(|l, r| l.partial_cmp(r).unwrap());
        for w in points.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidDomain("duplicate points".into()));
            }
        }
        Ok(Domain::PointSet(points))
    }

    pub fn min(&self) -> F {
        match self {
            Domain::IntervalUnion(iv) => iv[0].0,
            Domain::PointSet(p) => p[0],
        }
    }

    pub fn max(&self) -> F {
        match self {
            Domain::IntervalUnion(iv) => iv[iv.len() - 1].1,
            Domain::PointSet(p) => p[p.len() - 1],
        }
    }

    /// Number of distinct insertable points, if finite.
    pub fn cardinality(&self) -> Option<usize> {
        match self {
            Domain::PointSet(p) => Some(p.len()),
            Domain::IntervalUnion(iv) => {
                if iv.iter().all(|(a, b)| a == b) {
                    Some(iv.len())
                } else {
                    None
                }
            }
        }
    }

    pub fn contains(&self, z: F, tol: F) -> bool {
        match self {
            Domain::IntervalUnion(iv) => {
                // binary search on interval starts
                let idx = iv.partition_point(|(a, _)| *a <= z + tol);
                idx > 0 && z <= iv[idx - 1].1 + tol
            }
            Domain::PointSet(p) => {
                let idx = p.partition_point(|q| *q < z - tol);
                idx < p.len() && (p[idx] - z).abs() <= tol
            }
        }
    }

    /// Applies a map that is monotone increasing on the domain's hull.
    fn map_monotone(&self, map: &MobiusMap<F>) -> Result<Domain<F>> {
        match self {
            Domain::IntervalUnion(iv) => {
                let mut out = Vec::with_capacity(iv.len());
                for (a, b) in iv {
                    out.push((map.apply(*a)?, map.apply(*b)?));
                }
                Domain::interval_union(out)
            }
            Domain::PointSet(p) => {
                let mut out = Vec::with_capacity(p.len());
                for q in p {
                    out.push(map.apply(*q)?);
                }
                Domain::point_set(out)
            }
        }
    }

    /// Clamps every coordinate into `[lo, hi]` and pins the extreme
    /// endpoints exactly; used after Mobius normalization.
    fn pin_extremes(&mut self, lo: F, hi: F) {
        match self {
            Domain::IntervalUnion(iv) => {
                for (a, b) in iv.iter_mut() {
                    *a = (*a).max(lo).min(hi);
                    *b = (*b).max(lo).min(hi);
                }
                iv[0].0 = lo;
                let last = iv.len() - 1;
                iv[last].1 = hi;
            }
            Domain::PointSet(p) => {
                for q in p.iter_mut() {
                    *q = (*q).max(lo).min(hi);
                }
                p[0] = lo;
                let last = p.len() - 1;
                p[last] = hi;
            }
        }
    }
}

/// Real Mobius transformation `z -> (a z + b) / (c z + d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusMap<F> {
    pub a: F,
    pub b: F,
    pub c: F,
    pub d: F,
}

impl<F: Real> MobiusMap<F> {
    pub fn identity() -> Self {
        MobiusMap { a: F::one(), b: F::zero(), c: F::zero(), d: F::one() }
    }

    /// The map sending the normalized configuration to general endpoints:
    /// `lambda -> xmin`, `1 -> xmax`, `-lambda -> ymax`, `-1 -> ymin`.
    pub fn normalized_to_endpoints(lambda: F, xmin: F, xmax: F, ymin: F, ymax: F) -> Self {
        let _ = ymin; // fixed by the other three images and the cross-ratio
        let one = F::one();
        let two = F::of(2.0);
        let a = -((one - lambda) * xmin * xmax - (one + lambda) * ymax * xmax
            + two * lambda * ymax * xmin);
        let b = -(lambda * (one - lambda) * xmin * xmax + lambda * (one + lambda) * ymax * xmax
            - two * lambda * ymax * xmin);
        let c = (one - lambda) * ymax - (one + lambda) * xmin + two * lambda * xmax;
        let d = lambda * (one - lambda) * ymax + lambda * (one + lambda) * xmin
            - two * lambda * xmax;
        // the map is projective: rescale to unit leading size so tiny
        // gap parameters cannot underflow the numerator of `apply`
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        if scale > F::zero() && scale.is_finite() {
            MobiusMap { a: a / scale, b: b / scale, c: c / scale, d: d / scale }
        } else {
            MobiusMap { a, b, c, d }
        }
    }

    pub fn inverse(&self) -> Self {
        MobiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn apply(&self, z: F) -> Result<F> {
        let den = self.c * z + self.d;
        let scale = (self.c * z).abs() + self.d.abs();
        if den.abs() <= F::of(64.0) * F::epsilon() * scale {
            return Err(Error::Pole(z.as_f64()));
        }
        Ok((self.a * z + self.b) / den)
    }
}

/// Cross-ratio gap parameter of an ordered endpoint quadruple.
///
/// Endpoint differences are formed before any multiplication, and the
/// square-root difference in the numerator,
/// `sqrt(d_x d_y) - sqrt((xmin - ymin)(xmax - ymax))`, is evaluated through
/// the identity `d_x d_y - (d_y + gap)(d_x + gap) = -gap (d_x + d_y + gap)`,
/// which removes the cancellation that otherwise costs half the digits of
/// small gap parameters. `gap = xmin - ymax` and `d_x + d_y + gap` is
/// `xmax - ymin`, so every operand is an exact difference of inputs.
pub fn cross_ratio_lambda<F: Real>(xmin: F, xmax: F, ymin: F, ymax: F) -> Result<F> {
    if !(xmax > xmin && xmin > ymax && ymax > ymin) {
        return Err(Error::Separation);
    }
    let d_x = (xmax - xmin).abs();
    let d_y = (ymax - ymin).abs();
    let gap = (xmin - ymax).abs();
    let span = (xmax - ymin).abs();
    let s = (d_x * d_y).sqrt() + ((d_y + gap) * (d_x + gap)).sqrt();
    let lambda = gap * span / (s * s);
    // mathematically in (0,1); guard the open interval against rounding
    Ok(lambda.min(F::one() - F::epsilon()).max(F::min_positive_value()))
}

/// Validated separated pair with its Mobius normalization.
#[derive(Clone, Debug)]
pub struct SeparatedPair<F> {
    x: Domain<F>,
    y: Domain<F>,
    lambda: F,
    /// general coordinates -> normalized `[lambda,1] x [-1,-lambda]`
    forward: MobiusMap<F>,
    /// normalized -> general coordinates
    inverse: MobiusMap<F>,
    x_norm: Domain<F>,
    y_norm: Domain<F>,
}

impl<F: Real> SeparatedPair<F> {
    pub fn lambda(&self) -> F {
        self.lambda
    }

    pub fn x(&self) -> &Domain<F> {
        &self.x
    }

    pub fn y(&self) -> &Domain<F> {
        &self.y
    }

    pub fn x_normalized(&self) -> &Domain<F> {
        &self.x_norm
    }

    pub fn y_normalized(&self) -> &Domain<F> {
        &self.y_norm
    }

    pub fn forward_map(&self) -> &MobiusMap<F> {
        &self.forward
    }

    pub fn inverse_map(&self) -> &MobiusMap<F> {
        &self.inverse
    }
}

/// Checks the separation chain `max X > min X > max Y > min Y`, computes the
/// cross-ratio, and caches normalized copies of both domains.
pub fn validate_pair<F: Real>(x: Domain<F>, y: Domain<F>) -> Result<SeparatedPair<F>> {
    let (xmin, xmax) = (x.min(), x.max());
    let (ymin, ymax) = (y.min(), y.max());
    if xmin == xmax {
        return Err(Error::Degenerate("X is a single point"));
    }
    if ymin == ymax {
        return Err(Error::Degenerate("Y is a single point"));
    }
    if !(xmax > xmin && xmin > ymax && ymax > ymin) {
        return Err(Error::Separation);
    }
    let lambda = cross_ratio_lambda(xmin, xmax, ymin, ymax)?;
    let inverse = MobiusMap::normalized_to_endpoints(lambda, xmin, xmax, ymin, ymax);
    let forward = inverse.inverse();
    let mut x_norm = x.map_monotone(&forward)?;
    x_norm.pin_extremes(lambda, F::one());
    let mut y_norm = y.map_monotone(&forward)?;
    y_norm.pin_extremes(-F::one(), -lambda);
    Ok(SeparatedPair { x, y, lambda, forward, inverse, x_norm, y_norm })
}

/// `log |h|` for `h(z) = exp(scale) prod (z - roots_j) / (z - poles_j)`.
pub(crate) fn log_abs_h<F: Real>(z: F, roots: &[F], poles: &[F], scale: F) -> F {
    let mut acc = scale;
    for r in roots {
        acc = acc + (z - *r).abs().ln();
    }
    for p in poles {
        acc = acc - (z - *p).abs().ln();
    }
    acc
}

/// `d/dz log |h|`.
pub(crate) fn dlog_abs_h<F: Real>(z: F, roots: &[F], poles: &[F]) -> F {
    let mut acc = F::zero();
    for r in roots {
        acc = acc + (z - *r).recip();
    }
    for p in poles {
        acc = acc - (z - *p).recip();
    }
    acc
}

fn is_node<F: Real>(z: F, roots: &[F], poles: &[F]) -> bool {
    roots.contains(&z) || poles.contains(&z)
}

/// Maximizes `log|h|` (or `-log|h|` when `negate`) over `domain ∩ [lo, hi]`.
///
/// The slice is assumed to sit between consecutive roots (or poles), so
/// `log|h|` has at most one interior stationary point per subinterval; a
/// sampling guard asserts this in debug builds. Walls that coincide with a
/// root or pole are treated as infinitely repelling and never reported.
///
/// Returns `(argmax, objective value)`.
pub fn max_abs_logh_on<F: Real>(
    domain: &Domain<F>,
    lo: F,
    hi: F,
    roots: &[F],
    poles: &[F],
    log_scale: F,
    negate: bool,
) -> Result<(F, F)> {
    // -log|h| is log|1/h|: swap roots and poles, negate the scale
    let (rts, pls, scale): (&[F], &[F], F) =
        if negate { (poles, roots, -log_scale) } else { (roots, poles, log_scale) };

    let mut best: Option<(F, F)> = None;
    let mut consider = |z: F, val: F| {
        if best.is_none_or(|(_, bv)| val > bv) {
            best = Some((z, val));
        }
    };

    match domain {
        Domain::PointSet(pts) => {
            let start = pts.partition_point(|p| *p < lo);
            for &z in pts[start..].iter().take_while(|p| **p <= hi) {
                consider(z, log_abs_h(z, rts, pls, scale));
            }
        }
        Domain::IntervalUnion(ivs) => {
            for &(a, b) in ivs {
                let s_lo = a.max(lo);
                let s_hi = b.min(hi);
                if s_lo > s_hi {
                    continue;
                }
                for e in [s_lo, s_hi] {
                    if !is_node(e, rts, pls) {
                        consider(e, log_abs_h(e, rts, pls, scale));
                    }
                }
                if s_lo == s_hi {
                    continue;
                }
                // interior stationary point, if the derivative changes + -> -
                let d_lo = if is_node(s_lo, rts, pls) {
                    F::one()
                } else {
                    dlog_abs_h(s_lo, rts, pls)
                };
                let d_hi = if is_node(s_hi, rts, pls) {
                    -F::one()
                } else {
                    dlog_abs_h(s_hi, rts, pls)
                };
                if d_lo > F::zero() && d_hi < F::zero() {
                    #[cfg(debug_assertions)]
                    unimodality_guard(s_lo, s_hi, rts, pls);
                    let (mut wl, mut wh) = (s_lo, s_hi);
                    let tol = F::of(45.0) * F::epsilon();
                    while wh - wl > tol * wl.abs().max(wh.abs()) {
                        let mid = (wl + wh) * F::of(0.5);
                        if mid <= wl || mid >= wh {
                            break;
                        }
                        if dlog_abs_h(mid, rts, pls) > F::zero() {
                            wl = mid;
                        } else {
                            wh = mid;
                        }
                    }
                    let z = (wl + wh) * F::of(0.5);
                    consider(z, log_abs_h(z, rts, pls, scale));
                }
            }
        }
    }

    best.ok_or(Error::EmptySlice { lo: lo.as_f64(), hi: hi.as_f64() })
}

/// Debug-only check that the derivative sign pattern over the slice is
/// monotone (a single + to - transition), i.e. `log|h|` is unimodal there.
#[cfg(debug_assertions)]
fn unimodality_guard<F: Real>(lo: F, hi: F, roots: &[F], poles: &[F]) {
    let mut seen_negative = false;
    let mut violations = 0u32;
    for i in 1..32 {
        let t = F::of(i as f64 / 32.0);
        let z = lo + (hi - lo) * t;
        let d = dlog_abs_h(z, roots, poles);
        if d < F::zero() {
            seen_negative = true;
        } else if seen_negative {
            violations += 1;
        }
    }
    debug_assert!(violations == 0, "log|h| not unimodal on slice");
}

/// Serde schema for domain files: `{"X": {...}, "Y": {...}}` where each side
/// is either `{"intervals": [[a,b],...]}` or `{"points": [...]}`.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct DomainSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PairSpec {
    #[serde(rename = "X")]
    pub x: DomainSpec,
    #[serde(rename = "Y")]
    pub y: DomainSpec,
}

impl DomainSpec {
    pub fn to_domain(&self) -> Result<Domain<f64>> {
        match (&self.intervals, &self.points) {
            (Some(iv), None) => {
                Domain::interval_union(iv.iter().map(|p| (p[0], p[1])).collect())
            }
            (None, Some(p)) => Domain::point_set(p.clone()),
            _ => Err(Error::InvalidDomain(
                "each side needs exactly one of `intervals` or `points`".into(),
            )),
        }
    }

    pub fn from_domain(d: &Domain<f64>) -> Self {
        match d {
            Domain::IntervalUnion(iv) => DomainSpec {
                intervals: Some(iv.iter().map(|(a, b)| [*a, *b]).collect()),
                points: None,
            },
            Domain::PointSet(p) => DomainSpec { intervals: None, points: Some(p.clone()) },
        }
    }
}

impl PairSpec {
    pub fn parse(text: &str) -> Result<(Domain<f64>, Domain<f64>)> {
        let spec: PairSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidDomain(e.to_string()))?;
        Ok((spec.x.to_domain()?, spec.y.to_domain()?))
    }
}
