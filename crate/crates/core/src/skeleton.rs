//! Rank-`r` skeleton decompositions of the Cauchy kernel built from minimax
//! nodes, their stable interpolative evaluation forms, and the relative
//! condition number `kappa_r`.

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::real::{LogSigned, Real};

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Evaluation form of the decomposition.
///
/// `Raw` multiplies through the explicit Cauchy inverse and is kept for
/// diagnostics only: its intermediate matrix is ill conditioned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SkeletonForm {
    Raw,
    LeftInterp,
    RightInterp,
    TwoSided,
}

/// Skeleton decomposition `C(x, yt) C(xt, yt)^{-1} C(xt, y)` with
/// precomputed barycentric numerator weights for the stable forms.
#[derive(Clone, Debug)]
pub struct SkeletonDecomposition<F> {
    r: usize,
    /// `xt`, ascending.
    roots: Vec<F>,
    /// `yt`, descending.
    poles: Vec<F>,
    /// `W_i = prod_j (xt_i - yt_j) / prod_{j != i} (xt_i - xt_j)`.
    u_weights: Vec<LogSigned<F>>,
    /// `V_i = prod_j (xt_j - yt_i) / prod_{j != i} (yt_i - yt_j)`.
    v_weights: Vec<LogSigned<F>>,
    form: SkeletonForm,
}

impl<F: Real> SkeletonDecomposition<F> {
    /// Builds a decomposition from nodes; `roots` ascending, `poles`
    /// descending, every root above every pole.
    pub fn new(roots: Vec<F>, poles: Vec<F>, form: SkeletonForm) -> Result<Self> {
        if roots.len() != poles.len() {
            return Err(Error::DegenerateGeometry("root and pole counts differ"));
        }
        let r = roots.len();
        for w in roots.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::DegenerateGeometry("roots not strictly ascending"));
            }
        }
        for w in poles.windows(2) {
            if w[0] <= w[1] {
                return Err(Error::DegenerateGeometry("poles not strictly descending"));
            }
        }
        if r > 0 && roots[0] <= poles[0] {
            return Err(Error::Separation);
        }
        let mut u_weights = Vec::with_capacity(r);
        let mut v_weights = Vec::with_capacity(r);
        for i in 0..r {
            let mut w = LogSigned::one();
            for j in 0..r {
                w.mul_value(roots[i] - poles[j]);
                if j != i {
                    w.div_value(roots[i] - roots[j]);
                }
            }
            u_weights.push(w);
            let mut v = LogSigned::one();
            for j in 0..r {
                v.mul_value(roots[j] - poles[i]);
                if j != i {
                    v.div_value(poles[i] - poles[j]);
                }
            }
            v_weights.push(v);
        }
        Ok(SkeletonDecomposition { r, roots, poles, u_weights, v_weights, form })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn roots(&self) -> &[F] {
        &self.roots
    }

    pub fn poles(&self) -> &[F] {
        &self.poles
    }

    pub fn form(&self) -> SkeletonForm {
        self.form
    }

    pub fn with_form(mut self, form: SkeletonForm) -> Self {
        self.form = form;
        self
    }

    /// Interpolation vector `u(x)` (`side` x) or `v(y)` by the modified
    /// Lagrange formula: `O(r)` per call after the precomputed weights.
    fn eval_interp(&self, nodes: &[F], other: &[F], weights: &[LogSigned<F>], z: F) -> Result<Vec<F>> {
        // exact node hit: the cardinal vector
        if let Some(hit) = nodes.iter().position(|t| *t == z) {
            let mut e = vec![F::zero(); self.r];
            e[hit] = F::one();
            return Ok(e);
        }
        let mut numer = LogSigned::one();
        for j in 0..self.r {
            numer.mul_value(z - nodes[j]);
            let dp = z - other[j];
            if dp == F::zero() {
                return Err(Error::Pole(z.as_f64()));
            }
            numer.div_value(dp);
        }
        let mut out = Vec::with_capacity(self.r);
        for i in 0..self.r {
            let mut term = numer;
            term.ln_abs = term.ln_abs + weights[i].ln_abs;
            term.sign *= weights[i].sign;
            term.div_value(z - nodes[i]);
            out.push(term.value());
        }
        Ok(out)
    }

    /// `u(x)`: coefficients of the left-interpolative form.
    pub fn eval_u(&self, x: F) -> Result<Vec<F>> {
        self.eval_interp(&self.roots, &self.poles, &self.u_weights, x)
    }

    /// `v(y)`: coefficients of the right-interpolative form.
    pub fn eval_v(&self, y: F) -> Result<Vec<F>> {
        // v_i(y) = L_i(y, yt) prod_j (xt_j - yt_i)/(xt_j - y); the generic
        // helper computes prod (y - yt_j)/(y - xt_j) * V_i / (y - yt_i),
        // which is the same up to the sign (-1)^r absorbed pairwise.
        let r = self.r;
        if let Some(hit) = self.poles.iter().position(|t| *t == y) {
            let mut e = vec![F::zero(); r];
            e[hit] = F::one();
            return Ok(e);
        }
        let mut numer = LogSigned::one();
        for j in 0..r {
            numer.mul_value(y - self.poles[j]);
            let dp = self.roots[j] - y;
            if dp == F::zero() {
                return Err(Error::Pole(y.as_f64()));
            }
            numer.div_value(dp);
        }
        let mut out = Vec::with_capacity(r);
        for i in 0..r {
            let mut term = numer;
            term.ln_abs = term.ln_abs + self.v_weights[i].ln_abs;
            term.sign *= self.v_weights[i].sign;
            term.div_value(y - self.poles[i]);
            out.push(term.value());
        }
        Ok(out)
    }

    /// Entries of the explicit Cauchy inverse `C(xt, yt)^{-1}`, used by the
    /// raw form only.
    fn cauchy_inverse_entry(&self, row: usize, col: usize) -> F {
        // (C^{-1})_{row,col} = -q(xt_col) p(yt_row) /
        //                       (p'(xt_col) q'(yt_row) (xt_col - yt_row))
        // with p(z) = prod (z - xt_k), q(z) = prod (z - yt_k)
        let xt = self.roots[col];
        let yt = self.poles[row];
        let mut ls = LogSigned::from_value(-F::one());
        for k in 0..self.r {
            ls.mul_value(xt - self.poles[k]); // q(xt)
            ls.mul_value(yt - self.roots[k]); // p(yt)
            if k != col {
                ls.div_value(xt - self.roots[k]); // p'(xt)
            }
            if k != row {
                ls.div_value(yt - self.poles[k]); // q'(yt)
            }
        }
        ls.div_value(xt - yt);
        ls.value()
    }

    /// Evaluates the rank-`r` approximation of `1/(x - y)` in the selected
    /// form. Rank zero gives 0.
    pub fn reconstruct(&self, x: F, y: F) -> Result<F> {
        if self.r == 0 {
            return Ok(F::zero());
        }
        match self.form {
            SkeletonForm::LeftInterp => {
                let u = self.eval_u(x)?;
                let mut acc = F::zero();
                for i in 0..self.r {
                    let den = self.roots[i] - y;
                    if den == F::zero() {
                        return Err(Error::Pole(y.as_f64()));
                    }
                    acc = acc + u[i] / den;
                }
                Ok(acc)
            }
            SkeletonForm::RightInterp => {
                let v = self.eval_v(y)?;
                let mut acc = F::zero();
                for i in 0..self.r {
                    let den = x - self.poles[i];
                    if den == F::zero() {
                        return Err(Error::Pole(x.as_f64()));
                    }
                    acc = acc + v[i] / den;
                }
                Ok(acc)
            }
            SkeletonForm::TwoSided => {
                let u = self.eval_u(x)?;
                let v = self.eval_v(y)?;
                let mut acc = F::zero();
                for i in 0..self.r {
                    let mut row = F::zero();
                    for j in 0..self.r {
                        row = row + v[j] / (self.roots[i] - self.poles[j]);
                    }
                    acc = acc + u[i] * row;
                }
                Ok(acc)
            }
            SkeletonForm::Raw => {
                let mut acc = F::zero();
                for row in 0..self.r {
                    let left = x - self.poles[row];
                    if left == F::zero() {
                        return Err(Error::Pole(x.as_f64()));
                    }
                    for col in 0..self.r {
                        let right = self.roots[col] - y;
                        if right == F::zero() {
                            return Err(Error::Pole(y.as_f64()));
                        }
                        acc = acc
                            + self.cauchy_inverse_entry(row, col) / (left * right);
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Maximum of `|1 - (x - y) f(x)^T g(y)|` over the evaluation grid:
    /// exact enumeration on point sets, a Chebyshev grid of `grid_density`
    /// points per subinterval on interval unions.
    pub fn max_relative_error(
        &self,
        x_dom: &Domain<F>,
        y_dom: &Domain<F>,
        grid_density: usize,
    ) -> Result<F> {
        let xs = sample_domain(x_dom, grid_density);
        let ys = sample_domain(y_dom, grid_density);
        let mut worst = F::zero();
        for &x in &xs {
            for &y in &ys {
                let approx = self.reconstruct(x, y)?;
                let err = (F::one() - (x - y) * approx).abs();
                worst = worst.max(err);
            }
        }
        Ok(worst)
    }

    /// Relative condition numbers `(kappa_r(X, Y), kappa_r(Y, X))` of the
    /// one-sided forms on the given domains.
    ///
    /// The inner maximum over the opposite domain is exact: the factor
    /// `(x - y)/(xt_i - y)` is a Mobius function of `y`, monotone on every
    /// subinterval, so endpoints (or an exact point scan) suffice.
    pub fn kappa(&self, x_dom: &Domain<F>, y_dom: &Domain<F>) -> Result<(F, F)> {
        let y_cands = inner_candidates(y_dom);
        let x_cands = inner_candidates(x_dom);
        let kxy = {
            let objective = |x: F| -> Result<F> {
                let u = self.eval_u(x)?;
                let mut tot = F::zero();
                for i in 0..self.r {
                    let mut m = F::zero();
                    for &y in &y_cands {
                        m = m.max(((x - y) / (self.roots[i] - y)).abs());
                    }
                    tot = tot + u[i].abs() * m;
                }
                Ok(tot)
            };
            outer_max(x_dom, &self.roots, &objective)?
        };
        let kyx = {
            let objective = |y: F| -> Result<F> {
                let v = self.eval_v(y)?;
                let mut tot = F::zero();
                for i in 0..self.r {
                    let mut m = F::zero();
                    for &x in &x_cands {
                        m = m.max(((x - y) / (x - self.poles[i])).abs());
                    }
                    tot = tot + v[i].abs() * m;
                }
                Ok(tot)
            };
            // poles are descending; the gap walls need ascending order
            let mut asc = self.poles.clone();
            asc.reverse();
            outer_max(y_dom, &asc, &objective)?
        };
        Ok((kxy, kyx))
    }

    /// Serializes nodes, weights, and form to JSON for reuse across runs.
    pub fn to_json(&self) -> String {
        let repr = SkeletonJson {
            r: self.r,
            roots: self.roots.iter().map(|v| v.as_f64()).collect(),
            poles: self.poles.iter().map(|v| v.as_f64()).collect(),
            u_weights_ln: self.u_weights.iter().map(|w| w.ln_abs.as_f64()).collect(),
            u_weights_sign: self.u_weights.iter().map(|w| w.sign).collect(),
            v_weights_ln: self.v_weights.iter().map(|w| w.ln_abs.as_f64()).collect(),
            v_weights_sign: self.v_weights.iter().map(|w| w.sign).collect(),
            form: self.form,
        };
        serde_json::to_string_pretty(&repr).expect("skeleton serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<SkeletonDecomposition<F>> {
        let repr: SkeletonJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidDomain(e.to_string()))?;
        let lift = |v: &[f64]| v.iter().map(|x| F::of(*x)).collect::<Vec<F>>();
        let weights = |ln: &[f64], sign: &[i8]| -> Vec<LogSigned<F>> {
            ln.iter()
                .zip(sign)
                .map(|(l, s)| LogSigned { ln_abs: F::of(*l), sign: *s })
                .collect()
        };
        if repr.roots.len() != repr.r
            || repr.poles.len() != repr.r
            || repr.u_weights_ln.len() != repr.r
            || repr.v_weights_ln.len() != repr.r
        {
            return Err(Error::InvalidDomain("inconsistent skeleton lengths".into()));
        }
        Ok(SkeletonDecomposition {
            r: repr.r,
            roots: lift(&repr.roots),
            poles: lift(&repr.poles),
            u_weights: weights(&repr.u_weights_ln, &repr.u_weights_sign),
            v_weights: weights(&repr.v_weights_ln, &repr.v_weights_sign),
            form: repr.form,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct SkeletonJson {
    r: usize,
    roots: Vec<f64>,
    poles: Vec<f64>,
    u_weights_ln: Vec<f64>,
    u_weights_sign: Vec<i8>,
    v_weights_ln: Vec<f64>,
    v_weights_sign: Vec<i8>,
    form: SkeletonForm,
}

/// Cauchy kernel entry `1/(x - y)`; defined only off the diagonal and
/// positive whenever `x > y`.
pub fn cauchy_entry<F: Real>(x: F, y: F) -> Result<F> {
    if x == y {
        return Err(Error::Pole(x.as_f64()));
    }
    Ok((x - y).recip())
}

/// Large-`r` asymptote of `kappa_r` at `lambda -> 1`: the Lebesgue constant
/// growth of Chebyshev interpolation, `(2/pi)(gamma + log(8/pi) + log r)`.
pub fn kappa_asymptote<F: Real>(r: usize) -> F {
    let g = F::of(EULER_GAMMA);
    let c = F::of(8.0 / std::f64::consts::PI).ln();
    F::of(2.0 / std::f64::consts::PI) * (g + c + F::of(r as f64).ln())
}

fn sample_domain<F: Real>(dom: &Domain<F>, grid_density: usize) -> Vec<F> {
    match dom {
        Domain::PointSet(p) => p.clone(),
        Domain::IntervalUnion(ivs) => {
            let g = grid_density.max(2);
            let mut out = Vec::with_capacity(ivs.len() * g);
            for &(a, b) in ivs {
                if a == b {
                    out.push(a);
                    continue;
                }
                let mid = (a + b) * F::of(0.5);
                let half = (b - a) * F::of(0.5);
                for k in 0..g {
                    let theta = std::f64::consts::PI * k as f64 / (g - 1) as f64;
                    out.push(mid + half * F::of(theta.cos()));
                }
            }
            out
        }
    }
}

/// Candidate points for the exact inner maximization in `kappa`.
fn inner_candidates<F: Real>(dom: &Domain<F>) -> Vec<F> {
    match dom {
        Domain::PointSet(p) => p.clone(),
        Domain::IntervalUnion(ivs) => {
            let mut out = Vec::with_capacity(2 * ivs.len());
            for &(a, b) in ivs {
                out.push(a);
                if b != a {
                    out.push(b);
                }
            }
            out
        }
    }
}

/// Maximizes a continuous objective over a domain: exact scan on points,
/// per-gap Chebyshev sampling plus golden-section polish on intervals.
fn outer_max<F: Real>(
    dom: &Domain<F>,
    walls_asc: &[F],
    objective: &dyn Fn(F) -> Result<F>,
) -> Result<F> {
    let mut best = F::zero();
    match dom {
        Domain::PointSet(pts) => {
            for &z in pts {
                best = best.max(objective(z)?);
            }
        }
        Domain::IntervalUnion(ivs) => {
            let mut gaps: Vec<F> = Vec::with_capacity(walls_asc.len() + 2);
            gaps.push(dom.min());
            gaps.extend_from_slice(walls_asc);
            gaps.push(dom.max());
            const SAMPLES: usize = 48;
            for w in gaps.windows(2) {
                let (glo, ghi) = (w[0], w[1]);
                if ghi <= glo {
                    continue;
                }
                for &(a, b) in ivs {
                    let lo = a.max(glo);
                    let hi = b.min(ghi);
                    if lo > hi {
                        continue;
                    }
                    let mid = (lo + hi) * F::of(0.5);
                    let half = (hi - lo) * F::of(0.5);
                    let mut best_t = mid;
                    let mut best_v = F::neg_infinity();
                    for k in 0..SAMPLES {
                        let theta = std::f64::consts::PI * (k as f64 + 0.5) / SAMPLES as f64;
                        let z = mid + half * F::of(theta.cos());
                        let v = objective(z)?;
                        if v > best_v {
                            best_v = v;
                            best_t = z;
                        }
                    }
                    // golden-section polish around the best sample
                    let span = (hi - lo) * F::of(1.0 / SAMPLES as f64);
                    let mut glo2 = (best_t - span).max(lo);
                    let mut ghi2 = (best_t + span).min(hi);
                    let inv_phi = F::of(0.618_033_988_749_894_9);
                    let mut x1 = ghi2 - inv_phi * (ghi2 - glo2);
                    let mut x2 = glo2 + inv_phi * (ghi2 - glo2);
                    let mut f1 = objective(x1)?;
                    let mut f2 = objective(x2)?;
                    for _ in 0..40 {
                        if f1 > f2 {
                            ghi2 = x2;
                            x2 = x1;
                            f2 = f1;
                            x1 = ghi2 - inv_phi * (ghi2 - glo2);
                            f1 = objective(x1)?;
                        } else {
                            glo2 = x1;
                            x1 = x2;
                            f1 = f2;
                            x2 = glo2 + inv_phi * (ghi2 - glo2);
                            f2 = objective(x2)?;
                        }
                    }
                    best = best.max(best_v).max(f1).max(f2);
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::zolotarev_nodes;

    fn analytic_skeleton(r: usize, lam: f64, form: SkeletonForm) -> SkeletonDecomposition<f64> {
        let sol = zolotarev_nodes(r, lam).unwrap();
        SkeletonDecomposition::new(sol.roots, sol.poles, form).unwrap()
    }

    #[test]
    fn interpolation_property() {
        let dec = analytic_skeleton(5, 0.05, SkeletonForm::TwoSided);
        for j in 0..5 {
            let u = dec.eval_u(dec.roots()[j]).unwrap();
            let v = dec.eval_v(dec.poles()[j]).unwrap();
            for i in 0..5 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((u[i] - want).abs() <= 1e-13, "u[{i}] at node {j}");
                assert!((v[i] - want).abs() <= 1e-13, "v[{i}] at node {j}");
            }
        }
    }

    #[test]
    fn normalization_property() {
        // the exact normalization defect is the minimax product itself:
        // sum_i u_i(z) = 1 - prod_j (z - xt_j)/(z - yt_j), which stays below
        // sqrt(Z_r) on X; at r = 30, lambda = 0.5 that is ~1e-32, so the
        // sums are 1 to well under 1e-13
        let dec = analytic_skeleton(30, 0.5, SkeletonForm::TwoSided);
        for k in 0..100 {
            let x = 0.5 + 0.5 * (k as f64 + 0.5) / 100.0;
            let s: f64 = dec.eval_u(x).unwrap().iter().sum();
            assert!((s - 1.0).abs() <= 1e-13, "sum u at {x}: {s}");
            let y = -1.0 + 0.5 * (k as f64 + 0.5) / 100.0;
            let sv: f64 = dec.eval_v(y).unwrap().iter().sum();
            assert!((sv - 1.0).abs() <= 1e-13, "sum v at {y}: {sv}");
        }
    }

    #[test]
    fn normalization_defect_is_the_node_product() {
        // at visible scales the defect matches the product exactly
        let dec = analytic_skeleton(6, 0.02, SkeletonForm::TwoSided);
        for x in [0.03, 0.21, 0.77] {
            let s: f64 = dec.eval_u(x).unwrap().iter().sum();
            let mut prod = 1.0;
            for (rt, pl) in dec.roots().iter().zip(dec.poles()) {
                prod *= (x - rt) / (x - pl);
            }
            assert!(
                (s - (1.0 - prod)).abs() <= 1e-12,
                "x={x}: sum {s} vs 1 - prod {}",
                1.0 - prod
            );
        }
    }

    #[test]
    fn rank_one_u_matches_direct_inverse() {
        // r = 1: u_1(z) = C(yt, xt)^{-1} C(yt, z) = (xt - yt)/(z - yt)
        let dec =
            SkeletonDecomposition::new(vec![0.5f64], vec![-0.7], SkeletonForm::LeftInterp)
                .unwrap();
        for z in [0.2, 0.9, 3.0] {
            let u = dec.eval_u(z).unwrap();
            let want = (0.5 + 0.7) / (z + 0.7);
            assert!((u[0] - want).abs() <= 1e-14 * want.abs());
        }
    }

    #[test]
    fn exactness_on_nodes() {
        let dec = analytic_skeleton(4, 0.1, SkeletonForm::TwoSided);
        for &x in dec.roots() {
            for y in [-0.8, -0.33] {
                let got = dec.reconstruct(x, y).unwrap();
                let want = 1.0 / (x - y);
                assert!((got - want).abs() <= 1e-13 * want.abs());
            }
        }
        for &y in dec.poles() {
            let x = 0.9;
            let got = dec.reconstruct(x, y).unwrap();
            let want = 1.0 / (x - y);
            assert!((got - want).abs() <= 1e-13 * want.abs());
        }
    }

    #[test]
    fn rank_zero_reconstruction() {
        let dec =
            SkeletonDecomposition::<f64>::new(vec![], vec![], SkeletonForm::TwoSided).unwrap();
        assert_eq!(dec.reconstruct(0.5, -0.5).unwrap(), 0.0);
        let x = Domain::interval(0.1f64, 1.0).unwrap();
        let y = Domain::interval(-1.0f64, -0.1).unwrap();
        let err = dec.max_relative_error(&x, &y, 16).unwrap();
        assert_eq!(err, 1.0);
    }

    #[test]
    fn stable_forms_agree() {
        let lam = 1e-3;
        let r = 8;
        let dec = analytic_skeleton(r, lam, SkeletonForm::LeftInterp);
        let x_dom = Domain::interval(lam, 1.0).unwrap();
        let y_dom = Domain::interval(-1.0, -lam).unwrap();
        let (kxy, kyx) = dec.kappa(&x_dom, &y_dom).unwrap();
        for k in 0..20 {
            let x = lam + (1.0 - lam) * (k as f64 + 0.5) / 20.0;
            let y = -1.0 + (1.0 - lam) * ((19 - k) as f64 + 0.5) / 20.0;
            let left = dec.reconstruct(x, y).unwrap();
            let right = dec.clone().with_form(SkeletonForm::RightInterp).reconstruct(x, y).unwrap();
            let two = dec.clone().with_form(SkeletonForm::TwoSided).reconstruct(x, y).unwrap();
            let budget = 1e-12 * (kxy + kyx) / (x - y);
            assert!((left - right).abs() <= budget, "L-R at ({x},{y})");
            assert!((left - two).abs() <= budget, "L-2 at ({x},{y})");
        }
    }

    #[test]
    fn raw_form_matches_dense_inverse_small() {
        let dec = analytic_skeleton(3, 0.2, SkeletonForm::Raw);
        // dense inverse via Gauss-Jordan
        let r = 3;
        let mut m = vec![vec![0.0f64; 2 * r]; r];
        for i in 0..r {
            for j in 0..r {
                m[i][j] = 1.0 / (dec.roots()[i] - dec.poles()[j]);
            }
            m[i][r + i] = 1.0;
        }
        for col in 0..r {
            let piv = (col..r).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
            m.swap(col, piv);
            let d = m[col][col];
            for k in 0..2 * r {
                m[col][k] /= d;
            }
            for row in 0..r {
                if row != col {
                    let f = m[row][col];
                    for k in 0..2 * r {
                        m[row][k] -= f * m[col][k];
                    }
                }
            }
        }
        // dense inverse of C(xt,yt) has (i,j) entry m[i][r+j]; our closed form
        // indexes (row=pole index, col=root index) of C^{-1}
        for row in 0..r {
            for col in 0..r {
                let want = m[row][r + col];
                let got = dec.cauchy_inverse_entry(row, col);
                assert!(
                    (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                    "inv[{row}][{col}]: {got} vs {want}"
                );
            }
        }
        // raw reconstruction stays close to the stable form away from nodes
        let two = dec.clone().with_form(SkeletonForm::TwoSided);
        let (x, y) = (0.77, -0.4);
        let a = dec.reconstruct(x, y).unwrap();
        let b = two.reconstruct(x, y).unwrap();
        assert!((a - b).abs() <= 1e-8 * b.abs());
    }

    #[test]
    fn max_error_matches_z_value() {
        let lam = 0.05;
        let r = 4;
        let sol = zolotarev_nodes(r, lam).unwrap();
        let dec = analytic_skeleton(r, lam, SkeletonForm::TwoSided);
        let x_dom = Domain::interval(lam, 1.0).unwrap();
        let y_dom = Domain::interval(-1.0, -lam).unwrap();
        let err = dec.max_relative_error(&x_dom, &y_dom, 300).unwrap();
        let z = sol.log_z.exp();
        assert!((err - z).abs() <= 1e-8 * z, "grid err {err} vs Z {z}");
        // the maximum is attained at all (r+1)^2 extremal pairs
        for &x in &sol.extrema_x {
            for &y in &sol.extrema_y {
                let e = (1.0 - (x - y) * dec.reconstruct(x, y).unwrap()).abs();
                assert!((e - z).abs() <= 1e-9, "extremal pair ({x},{y}): {e} vs {z}");
            }
        }
    }

    #[test]
    fn covering_node_error_is_zero() {
        // nodes covering a 2-point X reproduce the kernel exactly there
        let dec = SkeletonDecomposition::new(
            vec![0.5f64, 1.0],
            vec![-0.6, -0.9],
            SkeletonForm::TwoSided,
        )
        .unwrap();
        let x
         = Domain::point_set(vec![0.5f64, 1.0]).unwrap();
        let y = Domain::point_set(vec![-0.9f64, -0.6, -0.2]).unwrap();
        let err = dec.max_relative_error(&x, &y, 0).unwrap();
        assert!(err <= 1e-12);
    }

    #[test]
    fn kappa_at_least_one_and_chebyshev_limit() {
        let x_dom = Domain::interval(0.3f64, 1.0).unwrap();
        let y_dom = Domain::interval(-1.0f64, -0.3).unwrap();
        let lam = 0.3;
        let dec = analytic_skeleton(1, lam, SkeletonForm::TwoSided);
        let (kxy, _) = dec.kappa(&x_dom, &y_dom).unwrap();
        assert!(kxy >= 1.0);

        // lambda -> 1: kappa_r approaches the Chebyshev Lebesgue asymptote
        let lam = 1.0 - 1e-6;
        for r in [10usize, 30] {
            let dec = analytic_skeleton(r, lam, SkeletonForm::TwoSided);
            let x_dom = Domain::interval(lam, 1.0).unwrap();
            let y_dom = Domain::interval(-1.0, -lam).unwrap();
            let (kxy, kyx) = dec.kappa(&x_dom, &y_dom).unwrap();
            let want: f64 = kappa_asymptote(r);
            assert!((kxy - want).abs() < 0.05, "r={r}: {kxy} vs {want}");
            // symmetric geometry: both sides agree to sampling accuracy
            assert!((kxy - kyx).abs() <= 1e-6 * kxy);
        }
    }

    #[test]
    fn kappa_offset_matches_rational_fit() {
        // lambda = 1e-5, r = 50: offset against the asymptote sits on the
        // rational fit 0.305 (log lambda)^2 / (5.88 - log lambda)
        let lam = 1e-5f64;
        let r = 50;
        let dec = analytic_skeleton(r, lam, SkeletonForm::TwoSided);
        let x_dom = Domain::interval(lam, 1.0).unwrap();
        let y_dom = Domain::interval(-1.0, -lam).unwrap();
        let (kxy, _) = dec.kappa(&x_dom, &y_dom).unwrap();
        let offset = kxy - kappa_asymptote::<f64>(r);
        let l = lam.ln();
        let fit = 0.305 * l * l / (5.88 - l);
        assert!((offset - fit).abs() <= 0.05, "offset {offset:.4} vs fit {fit:.4}");
    }

    #[test]
    fn cauchy_entry_values() {
        assert_eq!(cauchy_entry(1.0f64, -1.0).unwrap(), 0.5);
        assert!(cauchy_entry(0.5f64, -0.25).unwrap() > 0.0);
        assert!(matches!(cauchy_entry(0.3f64, 0.3), Err(Error::Pole(_))));
    }

    #[test]
    fn kappa_asymptote_values() {
        let k1: f64 = kappa_asymptote(1);
        let want = 2.0 / std::f64::consts::PI
            * (EULER_GAMMA + (8.0 / std::f64::consts::PI).ln());
        assert!((k1 - want).abs() < 1e-15);
        let k10: f64 = kappa_asymptote(10);
        let k100: f64 = kappa_asymptote(100);
        assert!(k10 < k100);
        let diff = k100 - k10;
        let want_diff = 2.0 / std::f64::consts::PI * (10.0f64).ln();
        assert!((diff - want_diff).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let dec = analytic_skeleton(3, 1e-4, SkeletonForm::TwoSided);
        let text = dec.to_json();
        let back: SkeletonDecomposition<f64> = SkeletonDecomposition::from_json(&text).unwrap();
        assert_eq!(back.rank(), 3);
        for i in 0..3 {
            assert_eq!(back.roots()[i], dec.roots()[i]);
            assert_eq!(back.poles()[i], dec.poles()[i]);
        }
        let (x, y) = (0.3, -0.5);
        assert_eq!(
            back.reconstruct(x, y).unwrap(),
            dec.reconstruct(x, y).unwrap()
        );
    }
}
