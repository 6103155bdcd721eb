//! The numerical kernels are generic over the scalar; `f32` works at
//! moderate gap parameters with correspondingly looser tolerances.

use zolotarev::analytic::zolotarev_nodes;
use zolotarev::domain::{cross_ratio_lambda, validate_pair, Domain};
use zolotarev::elliptic::{complete_k, xi, xi_inverse};
use zolotarev::skeleton::{SkeletonDecomposition, SkeletonForm};
use zolotarev::solver::{solve, SolveOptions};

#[test]
fn f32_kernels_work_at_moderate_parameters() {
    let lam: f32 = 0.2;
    let (k, kp) = complete_k(lam).unwrap();
    assert!(k > 1.5 && kp > k);
    let x = xi(0.5f32, lam).unwrap();
    assert!((x - lam.sqrt()).abs() < 1e-6);
    let v = xi_inverse(x, lam).unwrap();
    assert!((v - 0.5).abs() < 1e-5);

    let lam2 = cross_ratio_lambda(lam, 1.0f32, -1.0, -lam).unwrap();
    assert!((lam2 - lam).abs() < 1e-6);

    let sol = zolotarev_nodes(3, lam).unwrap();
    let sol64 = zolotarev_nodes(3, lam as f64).unwrap();
    assert!((sol.log_z as f64 - sol64.log_z).abs() < 1e-5 * sol64.log_z.abs());

    let dec =
        SkeletonDecomposition::new(sol.roots.clone(), sol.poles.clone(), SkeletonForm::TwoSided)
            .unwrap();
    let approx = dec.reconstruct(0.5f32, -0.5).unwrap();
    assert!((approx - 1.0).abs() < 0.3); // rank-3 kernel approximation

    let pair = validate_pair(
        Domain::interval(lam, 1.0f32).unwrap(),
        Domain::interval(-1.0f32, -lam).unwrap(),
    )
    .unwrap();
    let opts = SolveOptions::<f32> { certify_tol: 1e-4, stagnation_rel: 1e-3, ..Default::default() };
    let out = solve(&pair, 3, &opts).unwrap();
    assert!((out.log_z() as f64 - sol64.log_z).abs() < 1e-4 * sol64.log_z.abs());
}
