//! Values frozen from independent mpmath computations (30 digits).

use rankzeta::eisenstein::{epstein_direct, epstein_fourier, rank2_zeta, UpperHalfPoint};
use rankzeta::lattice::{h0, LatticeBasis, H0_TOL};
use rankzeta::specfun::{c, C64};

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm()
}

/// `Ê(i, s) = 2 π^{−s} Γ(s) ζ(s) β(s)` with β the Dirichlet L-function mod 4.
#[test]
fn epstein_at_i() {
    let i = UpperHalfPoint::new(0.0, 1.0).unwrap();
    let cases = [
        (c(2.0, 0.0), c(0.305_321_864_725_739_7, 0.0)),
        (c(2.5, 1.0), c(0.114_433_759_364_996_17, -0.074_199_623_982_170_89)),
        (c(0.3, 2.0), c(-0.072_861_037_478_125_79, 0.020_325_665_974_113_16)),
        (c(0.5, 7.0), c(0.000_068_749_911_178_351_41, 0.0)),
    ];
    for (s, want) in cases {
        assert!(close(epstein_fourier(i, s, None).unwrap(), want, 1e-11), "{s}");
        if s.re > 1.0 {
            assert!(close(epstein_direct(i, s).unwrap(), want, 1e-11), "{s}");
        }
    }
}

#[test]
fn rank2_zeta_values() {
    assert!(close(rank2_zeta(c(2.0, 0.0)).unwrap(), c(0.014_005_622_115_422_51, 0.0), 1e-12));
    assert!(close(rank2_zeta(c(0.5, 3.0)).unwrap(), c(-0.001_126_876_260_243_975_6, 0.0), 1e-11));
}

#[test]
fn theta_of_hexagonal_lattice() {
    let y = 3f64.sqrt() / 2.0;
    let hex = LatticeBasis::from_point(UpperHalfPoint::new(0.5, y).unwrap());
    assert!((h0(&hex, H0_TOL) - 0.148_071_036_446_071_5).abs() < 1e-15);
    let rect = LatticeBasis::new([2.0, 0.0], [0.0, 0.5]).unwrap();
    assert!((h0(&rect, H0_TOL) - 0.693_161_129_880_724_1).abs() < 1e-15);
}
