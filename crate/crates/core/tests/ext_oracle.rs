use mahowald_core::gradedmod::sphere_module;
use mahowald_core::lambda::LambdaAlgebra;
use mahowald_core::resolution::minimal_resolution;

#[test]
fn resolution_matches_lambda_algebra() {
    let r = minimal_resolution(&sphere_module(0), 8, 22).unwrap();
    let mut lambda = LambdaAlgebra::new();
    for s in 0..=8u32 {
        for n in 0..=14u32 {
            let t = (s + n) as i32;
            assert_eq!(
                r.ext_dim(s, t).unwrap(),
                lambda.ext_dim(s, n),
                "Ext^({s},{t})"
            );
        }
    }
}
