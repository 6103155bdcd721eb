//! Closed-form minimax solutions on `[lambda, 1] x [-1, -lambda]`: node
//! construction through the elliptic map, the game value `Z_n(lambda)` in log
//! scale, its sharp bounds, and Mobius transport to general interval pairs.

use crate::domain::MobiusMap;
use crate::elliptic::{moduli_rho, xi, xi_pair};
use crate::error::{Error, Result};
use crate::real::Real;

/// Analytic equioscillation solution of degree `n` at gap parameter `lambda`.
///
/// Roots ascend in `(lambda, 1)`, poles are their mirror images (descending),
/// and the `n + 1` extrema interleave the roots on each side.
#[derive(Clone, Debug)]
pub struct AnalyticSolution<F> {
    pub n: usize,
    pub lambda: F,
    pub roots: Vec<F>,
    pub poles: Vec<F>,
    pub extrema_x: Vec<F>,
    pub extrema_y: Vec<F>,
    /// `1 - roots[i]` to full relative accuracy.
    pub root_complements: Vec<F>,
    pub log_z: F,
}

/// Builds the degree-`n` analytic solution: roots at `xi((i - 1/2)/n)`,
/// extrema at `xi((j - 1)/n)`.
pub fn zolotarev_nodes<F: Real>(n: usize, lambda: F) -> Result<AnalyticSolution<F>> {
    if n == 0 {
        return Err(Error::OutOfDomain { name: "n", value: 0.0, expected: "n >= 1" });
    }
    let nf = F::of(n as f64);
    let mut roots = Vec::with_capacity(n);
    let mut complements = Vec::with_capacity(n);
    for i in 1..=n {
        let v = (F::of(i as f64) - F::of(0.5)) / nf;
        let (x, xc) = xi_pair(v, lambda)?;
        roots.push(x);
        complements.push(xc);
    }
    let mut extrema_x = Vec::with_capacity(n + 1);
    for j in 0..=n {
        extrema_x.push(xi(F::of(j as f64) / nf, lambda)?);
    }
    let poles = roots.iter().map(|x| -*x).collect();
    let extrema_y = extrema_x.iter().map(|x| -*x).collect();
    let log_z = log_z_from_complements(&roots, &complements);
    Ok(AnalyticSolution {
        n,
        lambda,
        roots,
        poles,
        extrema_x,
        extrema_y,
        root_complements: complements,
        log_z,
    })
}

fn log_z_from_complements<F: Real>(roots: &[F], complements: &[F]) -> F {
    let mut acc = F::zero();
    for (x, xc) in roots.iter().zip(complements) {
        acc = acc + xc.ln() - x.ln_1p();
    }
    acc + acc
}

/// `log Z_n(lambda)` from the exact node product; `n = 0` gives `log 1 = 0`.
///
/// Summed in log scale, so it stays finite for `lambda >= 1e-300` and
/// `n <= 10^4` where the linear-scale value would underflow.
pub fn zolotarev_number_log<F: Real>(n: usize, lambda: F) -> Result<F> {
    if n == 0 {
        crate::elliptic::EllipticModulus::new(lambda)?;
        return Ok(F::zero());
    }
    let sol = zolotarev_nodes(n, lambda)?;
    Ok(sol.log_z)
}

/// The four bracketing expressions around `Z_n(lambda)`, as logs:
/// `4 rho^{-2n} (1+rho^{-4n})^{-4} <= Z_n <= 4 rho^{-2n} (1+rho^{-4n})^{-2}
///  <= 4 rho^{-2n} <= 4 rho_tilde^{-2n}`.
#[derive(Clone, Copy, Debug)]
pub struct ZolotarevBounds<F> {
    pub log_lower: F,
    pub log_upper: F,
    pub log_upper2: F,
    pub log_upper3: F,
}

pub fn zolotarev_bounds<F: Real>(n: usize, lambda: F) -> Result<ZolotarevBounds<F>> {
    if n == 0 {
        return Err(Error::OutOfDomain { name: "n", value: 0.0, expected: "n >= 1" });
    }
    let m = moduli_rho(lambda)?;
    let two_n = F::of(2.0 * n as f64);
    let log4 = F::of(4.0).ln();
    let head = log4 - two_n * m.log_rho;
    // rho^{-4n} underflows harmlessly to zero for large n log(rho)
    let small = (-F::of(2.0) * two_n * m.log_rho).exp();
    let correction = small.ln_1p();
    Ok(ZolotarevBounds {
        log_lower: head - F::of(4.0) * correction,
        log_upper: head - F::of(2.0) * correction,
        log_upper2: head,
        log_upper3: log4 - two_n * m.log_rho_tilde,
    })
}

/// Ordered endpoints of a separated interval pair.
#[derive(Clone, Copy, Debug)]
pub struct PairEndpoints<F> {
    pub xmin: F,
    pub xmax: F,
    pub ymin: F,
    pub ymax: F,
}

/// Nodes of an analytic solution transported to general coordinates.
#[derive(Clone, Debug)]
pub struct MappedNodes<F> {
    pub roots: Vec<F>,
    pub poles: Vec<F>,
    pub extrema_x: Vec<F>,
    pub extrema_y: Vec<F>,
}

/// Transports an analytic solution through the Mobius map fixed by the
/// endpoint quadruple. The pair's cross-ratio must match `sol.lambda`; the
/// value of `Z_n` is unchanged by the transport.
pub fn map_nodes_to_pair<F: Real>(
    sol: &AnalyticSolution<F>,
    ep: &PairEndpoints<F>,
) -> Result<MappedNodes<F>> {
    let lam = crate::domain::cross_ratio_lambda(ep.xmin, ep.xmax, ep.ymin, ep.ymax)?;
    if (lam - sol.lambda).abs() > F::of(1e-12) * sol.lambda.max(F::epsilon()) {
        return Err(Error::LambdaMismatch { got: lam.as_f64(), expected: sol.lambda.as_f64() });
    }
    let map = MobiusMap::normalized_to_endpoints(sol.lambda, ep.xmin, ep.xmax, ep.ymin, ep.ymax);
    let send = |v: &[F]| -> Result<Vec<F>> { v.iter().map(|z| map.apply(*z)).collect() };
    Ok(MappedNodes {
        roots: send(&sol.roots)?,
        poles: send(&sol.poles)?,
        extrema_x: send(&sol.extrema_x)?,
        extrema_y: send(&sol.extrema_y)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::log_abs_h;

    #[test]
    fn n1_closed_forms() {
        let lam = 0.25f64;
        let sol = zolotarev_nodes(1, lam).unwrap();
        assert!((sol.roots[0] - 0.5).abs() < 1e-15); // sqrt(lambda)
        assert_eq!(sol.extrema_x[0], lam);
        assert_eq!(sol.extrema_x[1], 1.0);
        let want = 2.0 * ((1.0 - 0.5f64) / (1.0 + 0.5)).ln();
        assert!((sol.log_z - want).abs() < 1e-14);
        assert!((zolotarev_number_log(1, lam).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn n0_is_log_one() {
        assert_eq!(zolotarev_number_log(0, 0.3f64).unwrap(), 0.0);
    }

    #[test]
    fn interleaving_holds() {
        let sol = zolotarev_nodes(4, 1e-3f64).unwrap();
        for i in 0..4 {
            assert!(sol.extrema_x[i] < sol.roots[i]);
            assert!(sol.roots[i] < sol.extrema_x[i + 1]);
            // mirrored side: y_i > yt_i > y_{i+1}
            assert!(sol.extrema_y[i] > sol.poles[i]);
            assert!(sol.poles[i] > sol.extrema_y[i + 1]);
        }
    }

    #[test]
    fn chebyshev_limit_near_lambda_one() {
        let lam = 1.0 - 1e-6f64;
        let n = 6;
        let sol = zolotarev_nodes(n, lam).unwrap();
        for i in 1..=n {
            let v = (i as f64 - 0.5) / n as f64;
            let cheb = 1.0 - (1.0 - lam) * (1.0 + (std::f64::consts::PI * v).cos()) / 2.0;
            assert!(
                (sol.roots[i - 1] - cheb).abs() < 1e-8,
                "node {i}: {} vs {cheb}",
                sol.roots[i - 1]
            );
        }
    }

    #[test]
    fn bounds_chain_and_sandwich() {
        for &n in &[1usize, 2, 5, 10, 30] {
            for &lam in &[1e-7f64, 1e-3, 0.1, 0.5, 0.9] {
                // 1e-12 log slack absorbs rounding where the chain members
                // coincide to machine precision (rho ~ rho_tilde at small
                // lambda, vanishing (1+rho^-4n) corrections at large n)
                let b = zolotarev_bounds(n, lam).unwrap();
                assert!(b.log_lower <= b.log_upper + 1e-12);
                assert!(b.log_upper <= b.log_upper2 + 1e-12);
                assert!(b.log_upper2 <= b.log_upper3 + 1e-12);
                let z = zolotarev_number_log(n, lam).unwrap();
                assert!(
                    z >= b.log_lower - 1e-12 && z <= b.log_upper + 1e-12,
                    "n={n} lambda={lam}: {z} not in [{}, {}]",
                    b.log_lower,
                    b.log_upper
                );
            }
        }
    }

    #[test]
    fn tilde_bound_tightens_as_lambda_vanishes() {
        let n = 5;
        let gap = |lam: f64| {
            let b = zolotarev_bounds(n, lam).unwrap();
            b.log_upper3 - b.log_upper2
        };
        let g10 = gap(1e-10);
        assert!(g10 >= 0.0);
        assert!(g10 < gap(1e-4));
        assert!(g10 < 2e-1 * n as f64);
    }

    #[test]
    fn strict_monotonicity_in_n() {
        for &lam in &[1e-7f64, 1e-3, 0.5, 0.9] {
            let mut prev = zolotarev_number_log(0, lam).unwrap();
            for n in 1..=25 {
                let z = zolotarev_number_log(n, lam).unwrap();
                assert!(z < prev, "Z not strictly decreasing at n={n}, lambda={lam}");
                prev = z;
            }
        }
    }

    #[test]
    fn analytic_nodes_equioscillate() {
        for &(n, lam) in &[(3usize, 1e-5f64), (8, 0.2), (12, 0.9)] {
            let sol = zolotarev_nodes(n, lam).unwrap();
            let mut lead = Vec::new();
            for &x in &sol.extrema_x {
                lead.push(log_abs_h(x, &sol.roots, &sol.poles, 0.0));
            }
            for &y in &sol.extrema_y {
                lead.push(-log_abs_h(y, &sol.roots, &sol.poles, 0.0));
            }
            let mean = lead.iter().copied().sum::<f64>() / lead.len() as f64;
            for v in &lead {
                assert!((v - mean).abs() <= 1e-9, "n={n} lambda={lam}");
            }
            assert!((mean - sol.log_z / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn mapping_identity_endpoints_is_identity() {
        let lam = 0.2f64;
        let sol = zolotarev_nodes(3, lam).unwrap();
        let ep = PairEndpoints { xmin: lam, xmax: 1.0, ymin: -1.0, ymax: -lam };
        let mapped = map_nodes_to_pair(&sol, &ep).unwrap();
        for (a, b) in mapped.roots.iter().zip(&sol.roots) {
            assert!((a - b).abs() <= 1e-13 * b.abs());
        }
    }

    #[test]
    fn mapping_rejects_wrong_lambda() {
        let sol = zolotarev_nodes(2, 0.2f64).unwrap();
        let ep = PairEndpoints { xmin: 0.5, xmax: 1.0, ymin: -1.0, ymax: -0.5 };
        assert!(matches!(map_nodes_to_pair(&sol, &ep), Err(Error::LambdaMismatch { .. })));
    }

    #[test]
    fn mapped_nodes_land_in_ranges_and_preserve_value() {
        let ep = PairEndpoints { xmin: 2.0f64, xmax: 3.0, ymin: -3.0, ymax: -2.0 };
        let lam = crate::domain::cross_ratio_lambda(ep.xmin, ep.xmax, ep.ymin, ep.ymax).unwrap();
        let n = 4;
        let sol = zolotarev_nodes(n, lam).unwrap();
        let mapped = map_nodes_to_pair(&sol, &ep).unwrap();
        for r in &mapped.roots {
            assert!(*r > 2.0 && *r < 3.0);
        }
        for p in &mapped.poles {
            assert!(*p > -3.0 && *p < -2.0);
        }
        // grid + extrema evaluation of the minimax optimand: the maximum of
        // |h(x)/h(y)| must equal Z_n and be attained at the mapped extrema
        let mut grid_x: Vec<f64> = (0..=800).map(|i| 2.0 + i as f64 / 800.0).collect();
        grid_x.extend_from_slice(&mapped.extrema_x);
        let mut grid_y: Vec<f64> = (0..=800).map(|i| -3.0 + i as f64 / 800.0).collect();
        grid_y.extend_from_slice(&mapped.extrema_y);
        let mut best = f64::NEG_INFINITY;
        let max_x = grid_x
            .iter()
            .map(|&x| log_abs_h(x, &mapped.roots, &mapped.poles, 0.0))
            .fold(f64::NEG_INFINITY, f64::max);
        let min_y = grid_y
            .iter()
            .map(|&y| log_abs_h(y, &mapped.roots, &mapped.poles, 0.0))
            .fold(f64::INFINITY, f64::min);
        best = best.max(max_x - min_y);
        assert!(
            (best - sol.log_z).abs() < 1e-9,
            "grid max {best} vs log Z {}",
            sol.log_z
        );
    }
}
