//! Iterative equioscillation solver for `Z_n(X, Y)` on finite unions of
//! closed intervals and on point sets.
//!
//! The iterate is the root/pole configuration of
//! `h(z) = exp(b) prod (z - x_i) / (z - y_i)` in normalized coordinates. One
//! pass alternates three steps: relocate the local extrema between
//! consecutive roots (poles), solve the linearized equioscillation system in
//! closed form through the Cauchy determinant formula, and pick a step length
//! by golden-section search in logistic gap coordinates so updated roots stay
//! bracketed by their extrema. Every product in the closed-form solution is
//! accumulated as sign plus log magnitude and exponentiated only at the end,
//! so the iteration survives gap parameters down to 1e-300.

use crate::domain::{self, Domain, MobiusMap, SeparatedPair};
use crate::elliptic::{xi, xi_inverse};
use crate::error::{Error, Result};
use crate::real::{LogSigned, Real};

/// Knobs for [`solve`]; defaults follow the module contract.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions<F> {
    pub max_iter: usize,
    /// Certification tolerance on the equioscillation residual, relative to
    /// `max(1, |a|)`.
    pub certify_tol: F,
    /// Absolute golden-section tolerance in the step parameter `alpha`.
    pub golden_tol: F,
    /// Stagnation below this deviation (relative to `max(1, |a|)`) counts as
    /// successful termination; above it, stagnation is an error.
    pub stagnation_rel: F,
}

impl<F: Real> Default for SolveOptions<F> {
    fn default() -> Self {
        SolveOptions {
            max_iter: 200,
            certify_tol: F::of(1e-8),
            golden_tol: F::of(1e-3),
            stagnation_rel: F::of(1e-6),
        }
    }
}

/// Solver state in normalized coordinates.
#[derive(Clone, Debug)]
pub struct Equioscillator<F> {
    n: usize,
    lambda: F,
    x_norm: Domain<F>,
    y_norm: Domain<F>,
    to_general: MobiusMap<F>,
    /// Roots, ascending in `[lambda, 1]`.
    roots: Vec<F>,
    /// Poles, descending in `[-1, -lambda]`.
    poles: Vec<F>,
    /// Extrema in X, ascending, interleaving the roots.
    ext_x: Vec<F>,
    /// Extrema in Y, descending, interleaving the poles.
    ext_y: Vec<F>,
    c: Vec<F>,
    d: Vec<F>,
    /// Equioscillation level `a`.
    level: F,
    /// Log scale `b` of `h`.
    log_scale: F,
    deviation: F,
}

/// Outcome of the linearized correction solve.
#[derive(Clone, Debug)]
pub struct Correction<F> {
    pub level: F,
    pub log_scale: F,
    pub delta_roots: Vec<F>,
    pub delta_poles: Vec<F>,
}

/// Summary of one [`solve`] run.
#[derive(Clone, Debug)]
pub struct SolveReport<F> {
    pub log_z: F,
    pub iterations: usize,
    pub final_deviation: F,
    pub certified: bool,
    pub covering: bool,
    pub alpha_history: Vec<F>,
    /// Equioscillation spread after each correction, plus the final state.
    pub spread_history: Vec<F>,
}

/// Trivial-case witness: nodes covering the smaller point set.
#[derive(Clone, Debug)]
pub struct CoveringWitness<F> {
    pub roots: Vec<F>,
    pub poles: Vec<F>,
}

/// Result of [`solve`]: either a converged equioscillator or the trivial
/// covering case with `log Z = -inf`.
#[derive(Clone, Debug)]
pub enum SolveOutcome<F> {
    Solved(Equioscillator<F>, SolveReport<F>),
    Covering(CoveringWitness<F>, SolveReport<F>),
}

impl<F: Real> SolveOutcome<F> {
    pub fn report(&self) -> &SolveReport<F> {
        match self {
            SolveOutcome::Solved(_, r) | SolveOutcome::Covering(_, r) => r,
        }
    }

    pub fn log_z(&self) -> F {
        self.report().log_z
    }

    pub fn equioscillator(&self) -> Option<&Equioscillator<F>> {
        match self {
            SolveOutcome::Solved(eq, _) => Some(eq),
            SolveOutcome::Covering(..) => None,
        }
    }
}

/// The domain image under `xi^{-1}` used for initial node insertion.
enum VSet<F> {
    Intervals(Vec<(F, F)>),
    Points(Vec<F>),
}

impl<F: Real> VSet<F> {
    fn minimum(&self) -> F {
        match self {
            VSet::Intervals(iv) => iv[0].0,
            VSet::Points(p) => p[0],
        }
    }

    fn capacity(&self) -> Option<usize> {
        match self {
            VSet::Points(p) => Some(p.len()),
            VSet::Intervals(iv) => {
                if iv.iter().all(|(a, b)| a == b) {
                    Some(iv.len())
                } else {
                    None
                }
            }
        }
    }
}

/// Image of a normalized domain on the positive side under `xi^{-1}`.
/// `mirror` maps Y through `z -> -z` first.
fn v_image<F: Real>(dom: &Domain<F>, lambda: F, mirror: bool) -> Result<VSet<F>> {
    let inv = |z: F| -> Result<F> {
        let z = if mirror { -z } else { z };
        xi_inverse(z.max(lambda).min(F::one()), lambda)
    };
    match dom {
        Domain::IntervalUnion(ivs) => {
            let mut out: Vec<(F, F)> = Vec::with_capacity(ivs.len());
            for (a, b) in ivs {
                let (lo, hi) = if mirror { (inv(*b)?, inv(*a)?) } else { (inv(*a)?, inv(*b)?) };
                out.push((lo, hi));
            }
            out.sort_by(|l, r| l.0.partial_cmp(&r.0).unwrap());
            Ok(VSet::Intervals(out))
        }
        Domain::PointSet(pts) => {
            let mut out = Vec::with_capacity(pts.len());
            for p in pts {
                out.push(inv(*p)?);
            }
            out.sort_by(|l, r| l.partial_cmp(r).unwrap());
            Ok(VSet::Points(out))
        }
    }
}

/// Greedy farthest-point insertion: start at the set minimum, then repeatedly
/// place the candidate maximizing the distance to everything already placed
/// (ties resolved toward the smaller coordinate). Returns the sorted result.
fn greedy_insert<F: Real>(vset: &VSet<F>, count: usize) -> Result<Vec<F>> {
    if let Some(cap) = vset.capacity() {
        if cap < count {
            return Err(Error::Cardinality { needed: count, capacity: cap });
        }
    }
    let mut chosen: Vec<F> = vec![vset.minimum()];
    while chosen.len() < count {
        chosen.sort_by(|l, r| l.partial_cmp(r).unwrap());
        let mut best: Option<(F, F)> = None; // (min distance, candidate)
        let mut consider = |cand: F| {
            let dmin = chosen
                .iter()
                .map(|p| (cand - *p).abs())
                .fold(F::infinity(), |m, d| m.min(d));
            if dmin > F::zero() {
                match best {
                    Some((bd, bc)) if bd > dmin || (bd == dmin && bc <= cand) => {}
                    _ => best = Some((dmin, cand)),
                }
            }
        };
        match vset {
            VSet::Points(pts) => {
                for &p in pts {
                    consider(p);
                }
            }
            VSet::Intervals(ivs) => {
                for &(a, b) in ivs {
                    consider(a);
                    consider(b);
                    for w in chosen.windows(2) {
                        let mid = (w[0] + w[1]) * F::of(0.5);
                        if mid >= a && mid <= b {
                            consider(mid);
                        }
                    }
                }
            }
        }
        match best {
            Some((_, cand)) => chosen.push(cand),
            None => {
                return Err(Error::Cardinality { needed: count, capacity: chosen.len() })
            }
        }
    }
    chosen.sort_by(|l, r| l.partial_cmp(r).unwrap());
    Ok(chosen)
}

fn extrema_for<F: Real>(
    x_norm: &Domain<F>,
    y_norm: &Domain<F>,
    lambda: F,
    roots: &[F],
    poles: &[F],
) -> Result<(Vec<F>, Vec<F>)> {
    let n = roots.len();
    let mut ext_x = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let lo = if i == 0 { x_norm.min().min(lambda) } else { roots[i - 1] };
        let hi = if i == n { x_norm.max() } else { roots[i] };
        let (z, _) = domain::max_abs_logh_on(x_norm, lo, hi, roots, poles, F::zero(), false)?;
        ext_x.push(z);
    }
    let mut ext_y = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let hi = if i == 0 { y_norm.max() } else { poles[i - 1] };
        let lo = if i == n { y_norm.min() } else { poles[i] };
        let (z, _) = domain::max_abs_logh_on(y_norm, lo, hi, roots, poles, F::zero(), true)?;
        ext_y.push(z);
    }
    Ok((ext_x, ext_y))
}

fn residuals_for<F: Real>(
    roots: &[F],
    poles: &[F],
    ext_x: &[F],
    ext_y: &[F],
) -> Result<(Vec<F>, Vec<F>)> {
    let term = |z: F| -> Result<F> {
        let mut acc = F::zero();
        for (r, p) in roots.iter().zip(poles) {
            let dr = z - *r;
            let dp = z - *p;
            if dr == F::zero() || dp == F::zero() {
                return Err(Error::Coincidence(z.as_f64()));
            }
            acc = acc + dr.abs().ln() - dp.abs().ln();
        }
        Ok(acc)
    };
    let mut c = Vec::with_capacity(ext_x.len());
    for &x in ext_x {
        c.push(term(x)?);
    }
    let mut d = Vec::with_capacity(ext_y.len());
    for &y in ext_y {
        d.push(-term(y)?);
    }
    Ok((c, d))
}

fn spread_of<F: Real>(c: &[F], d: &[F], log_scale: F) -> F {
    let mut hi = F::neg_infinity();
    let mut lo = F::infinity();
    for &v in c {
        let s = v + log_scale;
        hi = hi.max(s);
        lo = lo.min(s);
    }
    for &v in d {
        let s = v - log_scale;
        hi = hi.max(s);
        lo = lo.min(s);
    }
    hi - lo
}

impl<F: Real> Equioscillator<F> {
    /// Builds the initial configuration: `n + 1` parameters per side inserted
    /// greedily into `xi^{-1}(X)` and `xi^{-1}(-Y)` starting at zero, roots
    /// and poles at the mapped gap midpoints.
    pub fn initialize(pair: &SeparatedPair<F>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfDomain { name: "n", value: 0.0, expected: "n >= 1" });
        }
        let lambda = pair.lambda();
        let vx = v_image(pair.x_normalized(), lambda, false)?;
        let vy = v_image(pair.y_normalized(), lambda, true)?;
        let ax = greedy_insert(&vx, n + 1)?;
        let by = greedy_insert(&vy, n + 1)?;
        let mut roots = Vec::with_capacity(n);
        let mut poles = Vec::with_capacity(n);
        for i in 0..n {
            roots.push(xi((ax[i] + ax[i + 1]) * F::of(0.5), lambda)?);
            poles.push(-xi((by[i] + by[i + 1]) * F::of(0.5), lambda)?);
        }
        // a root landing exactly on a domain point would put a log(0) into
        // the residuals; nudge it into the open gap
        nudge_off_points(&mut roots, pair.x_normalized());
        nudge_off_points(&mut poles, pair.y_normalized());
        Self::from_nodes(pair, roots, poles)
    }

    /// Builds solver state around given normalized nodes (roots ascending in
    /// `[lambda, 1]`, poles descending in `[-1, -lambda]`).
    pub fn from_nodes(pair: &SeparatedPair<F>, roots: Vec<F>, poles: Vec<F>) -> Result<Self> {
        let lambda = pair.lambda();
        let (ext_x, ext_y) =
            extrema_for(pair.x_normalized(), pair.y_normalized(), lambda, &roots, &poles)?;
        let (c, d) = residuals_for(&roots, &poles, &ext_x, &ext_y)?;
        let mut eq = Equioscillator {
            n: roots.len(),
            lambda,
            x_norm: pair.x_normalized().clone(),
            y_norm: pair.y_normalized().clone(),
            to_general: *pair.inverse_map(),
            roots,
            poles,
            ext_x,
            ext_y,
            c,
            d,
            level: F::zero(),
            log_scale: F::zero(),
            deviation: F::infinity(),
        };
        if let Ok(corr) = eq.correction_step() {
            eq.level = corr.level;
            eq.log_scale = corr.log_scale;
            eq.deviation = eq.spread();
        }
        Ok(eq)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> F {
        self.lambda
    }

    pub fn roots(&self) -> &[F] {
        &self.roots
    }

    pub fn poles(&self) -> &[F] {
        &self.poles
    }

    pub fn extrema_x(&self) -> &[F] {
        &self.ext_x
    }

    pub fn extrema_y(&self) -> &[F] {
        &self.ext_y
    }

    pub fn level(&self) -> F {
        self.level
    }

    pub fn log_scale(&self) -> F {
        self.log_scale
    }

    pub fn deviation(&self) -> F {
        self.deviation
    }

    /// `log Z_n = 2a` under the symmetric normalization of `h`.
    pub fn log_z(&self) -> F {
        self.level + self.level
    }

    /// Nodes mapped back to the original (general) coordinates.
    pub fn nodes_original(&self) -> Result<(Vec<F>, Vec<F>)> {
        let send = |v: &[F]| -> Result<Vec<F>> {
            v.iter().map(|z| self.to_general.apply(*z)).collect()
        };
        Ok((send(&self.roots)?, send(&self.poles)?))
    }

    /// Current residual vectors `c_i = sum_j log |(x_i - xt_j)/(x_i - yt_j)|`
    /// and `d_i = sum_j log |(y_i - yt_j)/(y_i - xt_j)|`.
    pub fn residual_logs(&self) -> Result<(Vec<F>, Vec<F>)> {
        residuals_for(&self.roots, &self.poles, &self.ext_x, &self.ext_y)
    }

    fn spread(&self) -> F {
        spread_of(&self.c, &self.d, self.log_scale)
    }

    /// Closed-form solve of the linearized equioscillation system via the
    /// Cauchy determinant formula; `O(n^2)` operations, log-domain products.
    pub fn correction_step(&self) -> Result<Correction<F>> {
        correction_for(
            &self.roots,
            &self.poles,
            &self.ext_x,
            &self.ext_y,
            &self.c,
            &self.d,
        )
    }

    /// Converts the correction to logistic gap coordinates, golden-section
    /// searches the step length, and adopts the best configuration.
    ///
    /// Returns the chosen `alpha`; `Err(Stagnation)` when no step reduces the
    /// equioscillation spread.
    pub fn line_search_st(&mut self, corr: &Correction<F>, golden_tol: F) -> Result<F> {
        let n = self.n;
        let mut s = Vec::with_capacity(n);
        let mut t = Vec::with_capacity(n);
        let mut ds = Vec::with_capacity(n);
        let mut dt = Vec::with_capacity(n);
        // gap products like gap_hi * gap_lo can underflow at extreme gap
        // parameters (1e-190 scale nodes), so the conversion is factored
        // into two representable ratios; the cap only keeps saturated
        // directions finite (the logistic clamp bounds the actual moves)
        let dir_cap = F::of(1e6);
        for i in 0..n {
            let gap_lo = self.roots[i] - self.ext_x[i];
            let gap_hi = self.ext_x[i + 1] - self.roots[i];
            if gap_lo <= F::zero() || gap_hi <= F::zero() {
                return Err(Error::DegenerateGeometry("root left its extremum bracket"));
            }
            s.push((gap_lo / gap_hi).ln());
            let dsv = (corr.delta_roots[i] / gap_lo)
                * ((self.ext_x[i + 1] - self.ext_x[i]) / gap_hi);
            if dsv.is_nan() {
                return Err(Error::DegenerateGeometry("search direction not finite"));
            }
            ds.push(dsv.max(-dir_cap).min(dir_cap));
            let gap_up = self.poles[i] - self.ext_y[i + 1];
            let gap_dn = self.ext_y[i] - self.poles[i];
            if gap_up <= F::zero() || gap_dn <= F::zero() {
                return Err(Error::DegenerateGeometry("pole left its extremum bracket"));
            }
            t.push((gap_up / gap_dn).ln());
            let dtv = (corr.delta_poles[i] / gap_dn)
                * ((self.ext_y[i] - self.ext_y[i + 1]) / gap_up);
            if dtv.is_nan() {
                return Err(Error::DegenerateGeometry("search direction not finite"));
            }
            dt.push(dtv.max(-dir_cap).min(dir_cap));
        }

        type State<F> = (Vec<F>, Vec<F>, Vec<F>, Vec<F>, Vec<F>, Vec<F>);
        let trial = |alpha: F| -> Option<(F, State<F>)> {
            let cap = F::of(34.5); // keeps the logistic away from the walls
            let mut roots = Vec::with_capacity(n);
            let mut poles = Vec::with_capacity(n);
            for i in 0..n {
                // both updates anchor at the small-magnitude bracket end
                // (ext_x[i] on the positive side, ext_y[i] on the negative
                // side): in normalized coordinates the other end can be many
                // orders larger and anchoring there cancels the node away
                let sv = (s[i] + alpha * ds[i]).max(-cap).min(cap);
                let sig = F::one() / (F::one() + (-sv).exp());
                roots.push(self.ext_x[i] + (self.ext_x[i + 1] - self.ext_x[i]) * sig);
                let tv = (t[i] + alpha * dt[i]).max(-cap).min(cap);
                let sig_dn = F::one() / (F::one() + tv.exp()); // gap_dn / span
                poles.push(self.ext_y[i] - (self.ext_y[i] - self.ext_y[i + 1]) * sig_dn);
            }
            let (ext_x, ext_y) =
                extrema_for(&self.x_norm, &self.y_norm, self.lambda, &roots, &poles).ok()?;
            let (c, d) = residuals_for(&roots, &poles, &ext_x, &ext_y).ok()?;
            let spread = spread_of(&c, &d, self.log_scale);
            if !spread.is_finite() {
                return None;
            }
            Some((spread, (roots, poles, ext_x, ext_y, c, d)))
        };

        // golden-section minimization of the spread over alpha in [0, 1]
        let inv_phi = F::of(0.618_033_988_749_894_9);
        let mut lo = F::zero();
        let mut hi = F::one();
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let mut f1 = trial(x1);
        let mut f2 = trial(x2);
        let spread_val = |o: &Option<(F, State<F>)>| o.as_ref().map_or(F::infinity(), |v| v.0);
        while hi - lo > golden_tol {
            if spread_val(&f1) < spread_val(&f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = trial(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = trial(x2);
            }
        }
        let (mut best_alpha, mut best) =
            if spread_val(&f1) < spread_val(&f2) { (x1, f1) } else { (x2, f2) };
        // the full step is often optimal near convergence; try it explicitly
        let full = trial(F::one());
        if spread_val(&full) < spread_val(&best) {
            best_alpha = F::one();
            best = full;
        }
        match best {
            Some((spread, state)) if spread < self.deviation => {
                let (roots, poles, ext_x, ext_y, c, d) = state;
                self.roots = roots;
                self.poles = poles;
                self.ext_x = ext_x;
                self.ext_y = ext_y;
                self.c = c;
                self.d = d;
                self.deviation = spread;
                Ok(best_alpha)
            }
            _ => Err(Error::Stagnation { deviation: self.deviation.as_f64() }),
        }
    }

    /// Sufficient optimality certificate: equioscillation of all `2n + 2`
    /// extremal log magnitudes at `±a` within `tol`, interleaving, and
    /// extrema inside their domains.
    pub fn certify(&self, tol: F) -> bool {
        let scale = F::one().max(self.level.abs());
        let budget = tol * scale;
        for &ci in &self.c {
            if ((ci + self.log_scale) - self.level).abs() > budget {
                return false;
            }
        }
        for &di in &self.d {
            if ((di - self.log_scale) - self.level).abs() > budget {
                return false;
            }
        }
        for i in 0..self.n {
            if !(self.ext_x[i] < self.roots[i] && self.roots[i] < self.ext_x[i + 1]) {
                return false;
            }
            if !(self.ext_y[i] > self.poles[i] && self.poles[i] > self.ext_y[i + 1]) {
                return false;
            }
        }
        let m_tol = F::of(256.0) * F::epsilon();
        self.ext_x.iter().all(|&z| self.x_norm.contains(z, m_tol * z.abs().max(F::one())))
            && self.ext_y.iter().all(|&z| self.y_norm.contains(z, m_tol * z.abs().max(F::one())))
    }
}

fn nudge_off_points<F: Real>(nodes: &mut [F], dom: &Domain<F>) {
    if let Domain::PointSet(pts) = dom {
        let mid = (dom.min() + dom.max()) * F::of(0.5);
        for node in nodes.iter_mut() {
            if pts.binary_search_by(|p| p.partial_cmp(node).unwrap()).is_ok() {
                // shift toward the hull midpoint so the node stays inside
                let step = F::of(32.0) * F::epsilon() * node.abs();
                *node = if *node <= mid { *node + step } else { *node - step };
            }
        }
    }
}

fn correction_for<F: Real>(
    roots: &[F],
    poles: &[F],
    ext_x: &[F],
    ext_y: &[F],
    c: &[F],
    d: &[F],
) -> Result<Correction<F>> {
    let n = roots.len();
    let m = n + 1;
    let degenerate = Err(Error::DegenerateGeometry(
        "vanishing difference in a Cauchy determinant product",
    ));

    // weights p_i (X rows) and q_i (Y rows), as sign + log magnitude
    let mut lp = Vec::with_capacity(m);
    let mut lq = Vec::with_capacity(m);
    for i in 0..m {
        let xi_ = ext_x[i];
        let mut p = LogSigned::one();
        for j in 0..n {
            p.mul_value(xi_ - poles[j]);
            p.mul_value(xi_ - roots[j]);
        }
        for j in 0..m {
            p.div_value(xi_ - ext_y[j]);
            if j != i {
                let diff = xi_ - ext_x[j];
                if diff == F::zero() {
                    return degenerate;
                }
                p.div_value(diff);
            }
        }
        lp.push(p);

        let yi = ext_y[i];
        let mut q = LogSigned::one();
        for j in 0..n {
            q.mul_value(roots[j] - yi);
            q.mul_value(poles[j] - yi);
        }
        for j in 0..m {
            q.div_value(ext_x[j] - yi);
            if j != i {
                let diff = ext_y[j] - yi;
                if diff == F::zero() {
                    return degenerate;
                }
                q.div_value(diff);
            }
        }
        lq.push(q);
    }

    // common scale so the weight ratios stay in linear range
    let mut shift = F::neg_infinity();
    for w in lp.iter().chain(lq.iter()) {
        if !w.is_zero() {
            shift = shift.max(w.ln_abs);
        }
    }
    if !shift.is_finite() {
        return degenerate;
    }
    let p: Vec<F> = lp.iter().map(|w| w.value_shifted(-shift)).collect();
    let q: Vec<F> = lq.iter().map(|w| w.value_shifted(-shift)).collect();

    let mut num = F::zero();
    let mut den = F::zero();
    for i in 0..m {
        num = num + c[i] * p[i] + d[i] * q[i];
        den = den + p[i] + q[i];
    }
    if den == F::zero() || !den.is_finite() {
        return degenerate;
    }
    let a = num / den;

    // b carries the true weight scale: b = exp(shift) * sum(...)
    let mut b_sum = F::zero();
    for i in 0..m {
        b_sum = b_sum + ext_x[i] * (a - c[i]) * p[i] + ext_y[i] * (a - d[i]) * q[i];
    }
    let b = {
        let mut ls = LogSigned::from_value(b_sum);
        ls.ln_abs = ls.ln_abs + shift;
        ls.value()
    };

    let mut delta_roots = Vec::with_capacity(n);
    let mut delta_poles = Vec::with_capacity(n);
    for i in 0..n {
        let xt = roots[i];
        let mut pref = LogSigned::one();
        for j in 0..m {
            pref.mul_value(ext_y[j] - xt);
            pref.mul_value(ext_x[j] - xt);
        }
        for j in 0..n {
            let dp = poles[j] - xt;
            if dp == F::zero() {
                return degenerate;
            }
            pref.div_value(dp);
            if j != i {
                let dr = roots[j] - xt;
                if dr == F::zero() {
                    return degenerate;
                }
                pref.div_value(dr);
            }
        }
        let mut sum = F::zero();
        for j in 0..m {
            sum = sum + (a - c[j]) * p[j] / (xt - ext_x[j]) + (a - d[j]) * q[j] / (xt - ext_y[j]);
        }
        let mut ls = LogSigned::from_value(sum);
        ls.ln_abs = ls.ln_abs + shift + pref.ln_abs;
        ls.sign *= pref.sign;
        let delta = ls.value();
        if !delta.is_finite() {
            return degenerate;
        }
        delta_roots.push(delta);

        let yt = poles[i];
        let mut prefy = LogSigned::one();
        for j in 0..m {
            prefy.mul_value(yt - ext_x[j]);
            prefy.mul_value(yt - ext_y[j]);
        }
        for j in 0..n {
            let dr = yt - roots[j];
            if dr == F::zero() {
                return degenerate;
            }
            prefy.div_value(dr);
            if j != i {
                let dp = yt - poles[j];
                if dp == F::zero() {
                    return degenerate;
                }
                prefy.div_value(dp);
            }
        }
        let mut sumy = F::zero();
        for j in 0..m {
            sumy =
                sumy + (a - c[j]) * p[j] / (yt - ext_x[j]) + (a - d[j]) * q[j] / (yt - ext_y[j]);
        }
        let mut lsy = LogSigned::from_value(sumy);
        lsy.ln_abs = lsy.ln_abs + shift + prefy.ln_abs;
        lsy.sign *= prefy.sign;
        let delta = lsy.value();
        if !delta.is_finite() {
            return degenerate;
        }
        delta_poles.push(delta);
    }

    Ok(Correction { level: a, log_scale: b, delta_roots, delta_poles })
}

/// Computes `Z_n(X, Y)` for a validated pair.
///
/// When the smaller side is a point set with at most `n` elements the result
/// is the trivial covering with `log Z = -inf`. Otherwise the equioscillation
/// iteration runs until its spread stops decreasing; stagnation close to the
/// numerical floor counts as convergence, farther away it is an error.
pub fn solve<F: Real>(
    pair: &SeparatedPair<F>,
    n: usize,
    opts: &SolveOptions<F>,
) -> Result<SolveOutcome<F>> {
    let card = pair
        .x()
        .cardinality()
        .unwrap_or(usize::MAX)
        .min(pair.y().cardinality().unwrap_or(usize::MAX));
    if card <= n {
        let witness = covering_witness(pair, n);
        let report = SolveReport {
            log_z: F::neg_infinity(),
            iterations: 0,
            final_deviation: F::zero(),
            certified: true,
            covering: true,
            alpha_history: Vec::new(),
            spread_history: Vec::new(),
        };
        return Ok(SolveOutcome::Covering(witness, report));
    }

    let mut eq = Equioscillator::initialize(pair, n)?;
    let mut alpha_history = Vec::new();
    let mut spread_history = Vec::new();
    let floor = F::of(64.0) * F::epsilon();
    let mut iterations = 0;
    let mut stagnated = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let corr = eq.correction_step()?;
        eq.level = corr.level;
        eq.log_scale = corr.log_scale;
        eq.deviation = eq.spread();
        spread_history.push(eq.deviation);
        if eq.deviation <= floor * F::one().max(eq.level.abs()) {
            break;
        }
        match eq.line_search_st(&corr, opts.golden_tol) {
            Ok(alpha) => alpha_history.push(alpha),
            Err(Error::Stagnation { .. }) => {
                stagnated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    // the last accepted state has no correction yet; refresh a and b
    if let Ok(corr) = eq.correction_step() {
        eq.level = corr.level;
        eq.log_scale = corr.log_scale;
    }
    eq.deviation = eq.spread();
    spread_history.push(eq.deviation);

    let scale = F::one().max(eq.level.abs());
    if eq.deviation > opts.stagnation_rel * scale {
        if stagnated {
            return Err(Error::Stagnation { deviation: eq.deviation.as_f64() });
        }
        if iterations >= opts.max_iter {
            return Err(Error::MaxIter(opts.max_iter));
        }
    }
    let certified = eq.certify(opts.certify_tol);
    let report = SolveReport {
        log_z: eq.log_z(),
        iterations,
        final_deviation: eq.deviation,
        certified,
        covering: false,
        alpha_history,
        spread_history,
    };
    Ok(SolveOutcome::Solved(eq, report))
}

/// Places nodes on every point of the covered side; remaining slots repeat
/// covered points (any completion keeps the error identically zero).
fn covering_witness<F: Real>(pair: &SeparatedPair<F>, n: usize) -> CoveringWitness<F> {
    let fill = |dom: &Domain<F>, fallback_lo: F, fallback_hi: F| -> Vec<F> {
        let mut out: Vec<F> = match dom {
            Domain::PointSet(p) => p.iter().copied().take(n).collect(),
            Domain::IntervalUnion(iv) => iv.iter().map(|(a, _)| *a).take(n).collect(),
        };
        let mut k = 0usize;
        while out.len() < n {
            let t = F::of((k as f64 + 0.5) / n as f64);
            let cand = fallback_lo + (fallback_hi - fallback_lo) * t;
            out.push(cand);
            k += 1;
        }
        out
    };
    let roots = fill(pair.x(), pair.x().min(), pair.x().max());
    let poles = fill(pair.y(), pair.y().min(), pair.y().max());
    CoveringWitness { roots, poles }
}
