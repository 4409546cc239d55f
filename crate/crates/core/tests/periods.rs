use num_rational::Rational64;
use rankzeta::periods::{find_zeros, ZeroOptions, ZetaFunction, ZetaSpec};
use rankzeta::presets::preset;
use rankzeta::rootdata::CartanType;
use rankzeta::specfun::{c, C64};
use rankzeta::truncomb::{identity_check, Identity, SamplingSpec};

fn raw_with_order(group: CartanType, alpha_p: usize, order: Vec<usize>, s: C64) -> C64 {
    let spec = ZetaSpec::new(group, alpha_p).unwrap().with_order(order).unwrap();
    ZetaFunction::new(spec).unwrap().raw(s).unwrap()
}

#[test]
fn residue_does_not_depend_on_the_order() {
    let s = c(0.37, 0.81);
    let a = raw_with_order(CartanType::A3, 1, vec![0, 2], s);
    let b = raw_with_order(CartanType::A3, 1, vec![2, 0], s);
    assert!((a - b).norm() <= 1e-8 * a.norm(), "{a} vs {b}");

    let s = c(-0.4, 0.55);
    let orders = [vec![0, 2, 3], vec![3, 2, 0], vec![2, 0, 3]];
    let vals: Vec<_> = orders.iter().map(|o| raw_with_order(CartanType::A4, 1, o.clone(), s)).collect();
    for v in &vals[1..] {
        assert!((v - vals[0]).norm() <= 1e-8 * vals[0].norm(), "{v} vs {}", vals[0]);
    }
}

#[test]
fn every_preset_is_symmetric() {
    for spec in rankzeta::presets::all_presets() {
        let zf = ZetaFunction::new(spec.clone()).unwrap();
        let sigma = c(0.21, 0.93);
        let v = zf.eval(sigma).unwrap();
        let w = zf.eval(c(1.0, 0.0) - sigma).unwrap();
        let tol = if spec.group.rank() <= 2 { 1e-6 } else { 1e-5 };
        assert!((v - w).norm() <= tol * v.norm(), "{spec:?}");
    }
}

#[test]
fn lemma2_at_rho() {
    let one = Rational64::from_integer(1);
    for (group, n) in [(CartanType::G2, 2), (CartanType::C2, 2), (CartanType::A4, 4)] {
        let spec = SamplingSpec { samples: 500, seed: 11, lambda: Some(vec![one; n]) };
        let r = identity_check(group, Identity::Lemma2Phi, &spec).unwrap();
        assert!(r.pass && r.evaluations > 0, "{group:?}: {:?}", r.violations.first());
    }
}

/// Ordinates from an independent mpmath evaluation of the same residues
/// (sign changes of ξ^{G/P}(1/2 + it) refined by bisection).
#[test]
fn g2_zeros_match_reference() {
    let cases: [(usize, usize, [f64; 4]); 2] = [
        (1, 17, [1.64837321880505, 2.30408489183003, 2.44907112088114, 5.62304494173948]),
        (0, 16, [1.4444099027272, 2.1148739824314, 2.50374757262755, 5.89731107210439]),
    ];
    for (alpha_p, count, reference) in cases {
        let zf = ZetaFunction::new(preset(CartanType::G2, alpha_p).unwrap()).unwrap();
        let rep = find_zeros(&zf, &ZeroOptions::for_scale(6.0, zf.spec.norm.max_clearing_scale())).unwrap();
        assert!(rep.counts_match);
        assert_eq!(rep.zeros.len(), count);
        let found: Vec<f64> = rep.zeros.iter().map(|z| z.sigma.im).collect();
        for t in reference {
            assert!(found.iter().any(|f| (f - t).abs() < 1e-9), "{t} not in {found:?}");
        }
    }
}
