//! Property tests for the library's structural invariants: monotone node map,
//! cross-ratio invariance, Mobius round trips, interpolation identities,
//! and value monotonicity.

use proptest::prelude::*;

use zolotarev::analytic::{zolotarev_nodes, zolotarev_number_log};
use zolotarev::domain::{cross_ratio_lambda, MobiusMap};
use zolotarev::elliptic::{xi, xi_inverse, xi_pair};
use zolotarev::skeleton::{SkeletonDecomposition, SkeletonForm};

/// Gap parameters spanning the extreme range on a log scale.
fn lambda_strategy() -> impl Strategy<Value = f64> {
    (-250.0f64..-0.01).prop_map(|e| e.exp())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn xi_is_monotone_and_sandwiched(lam in lambda_strategy(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let xa = xi(lo, lam).unwrap();
        let xb = xi(hi, lam).unwrap();
        prop_assert!(xa >= lam && xb <= 1.0);
        if hi - lo > 1e-12 {
            prop_assert!(xb > xa, "xi({hi}) = {xb} <= xi({lo}) = {xa} at lambda = {lam}");
        }
    }

    #[test]
    fn xi_pair_sums_to_one(lam in lambda_strategy(), v in 0.0f64..1.0) {
        let (x, xc) = xi_pair(v, lam).unwrap();
        prop_assert!((x + xc - 1.0).abs() <= 1e-14 * (1.0 + x));
    }

    #[test]
    fn xi_inverse_round_trips(lam in -60.0f64..-0.1, v in 0.02f64..0.98) {
        let lam = lam.exp();
        let z = xi(v, lam).unwrap();
        let back = xi_inverse(z, lam).unwrap();
        prop_assert!((back - v).abs() <= 1e-10, "lambda={lam} v={v} back={back}");
    }

    #[test]
    fn cross_ratio_is_affine_invariant(
        gap in 0.05f64..0.5,
        dx in 0.1f64..4.0,
        dy in 0.1f64..4.0,
        alpha in 0.5f64..2.0,
        beta in -4.0f64..4.0,
    ) {
        // parameter ranges keep the mapped gap representable: the mapped
        // endpoints carry eps * |coordinate| rounding, which is the floor of
        // what any evaluation can recover about the gap
        let (ymin, ymax) = (-gap - dy, -gap);
        let (xmin, xmax) = (0.0, dx);
        let lam = cross_ratio_lambda(xmin, xmax, ymin, ymax).unwrap();
        let f = |z: f64| alpha * z + beta;
        let lam2 = cross_ratio_lambda(f(xmin), f(xmax), f(ymin), f(ymax)).unwrap();
        prop_assert!((lam - lam2).abs() <= 1e-12 * lam, "{lam} vs {lam2}");
    }

    #[test]
    fn mobius_round_trips(
        lam in 1e-6f64..0.9,
        xmax_extra in 0.1f64..10.0,
        ymin_extra in 0.1f64..10.0,
        z in -0.999f64..0.999,
    ) {
        let (xmin, xmax) = (1.0, 1.0 + xmax_extra);
        let (ymin, ymax) = (-1.0 - ymin_extra, -1.0);
        let lam_pair = cross_ratio_lambda(xmin, xmax, ymin, ymax).unwrap();
        let _ = lam;
        let to_general = MobiusMap::normalized_to_endpoints(lam_pair, xmin, xmax, ymin, ymax);
        let back = to_general.inverse().apply(to_general.apply(z).unwrap()).unwrap();
        prop_assert!((back - z).abs() <= 1e-11 * z.abs().max(1.0));
    }

    #[test]
    fn z_value_is_strictly_monotone_in_n(lam in -40.0f64..-0.1) {
        let lam = lam.exp();
        let mut prev = zolotarev_number_log(0, lam).unwrap();
        for n in 1..=12usize {
            let z = zolotarev_number_log(n, lam).unwrap();
            prop_assert!(z < prev, "Z_{n} not below Z_{} at lambda={lam}", n - 1);
            prev = z;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn skeleton_cardinal_and_defect_identities(
        lam in 1e-5f64..0.5,
        r in 2usize..10,
        t in 0.01f64..0.99,
    ) {
        let sol = zolotarev_nodes(r, lam).unwrap();
        let dec = SkeletonDecomposition::new(sol.roots, sol.poles, SkeletonForm::TwoSided).unwrap();
        // cardinal property at each node
        for j in 0..r {
            let u = dec.eval_u(dec.roots()[j]).unwrap();
            for (i, ui) in u.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ui - want).abs() <= 1e-12);
            }
        }
        // normalization defect equals the minimax product
        let z = lam + (1.0 - lam) * t;
        let s: f64 = dec.eval_u(z).unwrap().iter().sum();
        let mut prod = 1.0;
        for (rt, pl) in dec.roots().iter().zip(dec.poles()) {
            prod *= (z - rt) / (z - pl);
        }
        prop_assert!((s + prod - 1.0).abs() <= 1e-11 * (1.0 + prod.abs()));
        // reconstruction is exact on roots
        let y = -(lam + (1.0 - lam) * (1.0 - t));
        let x = dec.roots()[r / 2];
        let got = dec.reconstruct(x, y).unwrap();
        prop_assert!((got - 1.0 / (x - y)).abs() <= 1e-12 / (x - y));
    }
}
