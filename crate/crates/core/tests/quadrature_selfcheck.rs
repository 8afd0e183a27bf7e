mod common;

use common::*;

#[test]
fn quadrature_known_integrals() {
    let e = integrate_to(|x| (-x).exp(), 0.0, f64::INFINITY);
    assert!((e - 1.0).abs() < 1e-13, "{e}");
    let p = integrate_to(|x| x.powf(-2.25), 1.0, f64::INFINITY);
    assert!((p / (1.0 / 1.25) - 1.0).abs() < 1e-12, "{p}");
    let s = integrate_to(|x| x.powf(-0.5), 0.0, 1.0);
    assert!((s - 2.0).abs() < 1e-12, "{s}");
    let c = integrate_to(f64::cos, 0.0, std::f64::consts::FRAC_PI_2);
    assert!((c - 1.0).abs() < 1e-14, "{c}");
    assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-14);
    assert!((normal_inv(0.975) - 1.959_963_984_540_054).abs() < 1e-12);
}
