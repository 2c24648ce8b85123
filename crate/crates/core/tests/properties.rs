//! Cross-module properties: symplectic invariance of the quasiprobability,
//! complements, operator/phase-space duality and the sign pattern of the
//! optimal bounds.

use hyperqpi::bounds::{optimize_bounds, sweep, OptimizerConfig, RegionFamily, SweepKind};
use hyperqpi::oracle::{
    apply_metaplectic, apply_metaplectic_state, expectation_region_operator, qpi, Metaplectic, PhasePoint, Region,
    StateSpec,
};
use hyperqpi::quadrature::QuadratureConfig;

fn planar() -> QuadratureConfig<f64> {
    QuadratureConfig::planar()
}

#[test]
fn squeeze_preserves_hyperbola_qpi() {
    let state = StateSpec::coherent(1.0, 0.5).unwrap();
    for sigma in [0.5, 2.0] {
        let m = Metaplectic::squeeze(sigma).unwrap();
        let squeezed = apply_metaplectic_state(&m, &state).unwrap();
        for k in [0.5, 2.0] {
            let region = Region::HyperbolaSingle(k);
            let before = qpi(&state, &region, &planar()).unwrap().value;
            let after = qpi(&squeezed, &region, &planar()).unwrap().value;
            assert!(
                (before - after).abs() < 1e-7,
                "σ = {sigma}, k = {k}: {before} vs {after}"
            );
        }
    }
}

#[test]
fn transformed_state_matches_transformed_region() {
    let state = StateSpec::squeezed(0.7, -0.5, 1.0).unwrap();
    let m = Metaplectic::rotation(0.4).compose(&Metaplectic::translation(0.3, -0.2));
    let region = Region::HyperbolaDouble(0.5);
    let moved_state = apply_metaplectic_state(&m, &state).unwrap();
    let moved_region = apply_metaplectic(&m, &region).unwrap();
    let a = qpi(&state, &region, &planar()).unwrap().value;
    let b = qpi(&moved_state, &moved_region, &planar()).unwrap().value;
    assert!((a - b).abs() < 1e-7, "{a} vs {b}");
}

#[test]
fn region_and_complement_sum_to_one() {
    let states = [StateSpec::Fock(3), StateSpec::coherent(-1.0, 2.0).unwrap()];
    let regions = [
        Region::HyperbolaSingle(1.0),
        Region::HyperbolaDouble(0.5),
        Region::GeneralWedge {
            vertex: PhasePoint::new(0.5, -0.5).unwrap(),
            axis_angle: 1.0,
            half_angle: 0.6,
        },
    ];
    for s in &states {
        for r in &regions {
            let inside = qpi(s, r, &planar()).unwrap().value;
            let outside = qpi(s, &r.clone().complement(), &planar()).unwrap().value;
            assert!(
                (inside + outside - 1.0).abs() < 1e-7,
                "{s:?} {r:?}: {inside} + {outside}"
            );
        }
    }
}

#[test]
fn operator_expectation_matches_phase_space_integral() {
    let states = [
        StateSpec::Fock(1),
        StateSpec::coherent(0.8, 0.6).unwrap(),
        StateSpec::squeezed(1.5, 1.0, 0.3).unwrap(),
    ];
    for s in &states {
        for k in [0.5, 2.0] {
            let op = expectation_region_operator(s, k, &planar()).unwrap().value;
            let ps = qpi(s, &Region::HyperbolaSingle(k), &planar()).unwrap().value;
            assert!((op - ps).abs() < 1e-6, "{s:?}, k = {k}: {op} vs {ps}");
        }
    }
}

#[test]
fn bounds_straddle_the_classical_range() {
    let cfg = OptimizerConfig::default();
    let ks = [0.3, 3.0];
    for kind in [SweepKind::Single, SweepKind::Double] {
        for (k, row) in sweep(kind, &ks, &cfg).unwrap() {
            let b = row.unwrap();
            assert!(b.lower < 0.0, "{kind:?} k = {k}: lower {}", b.lower);
            assert!(
                b.upper_excess >= 0.0 && b.upper >= 1.0,
                "{kind:?} k = {k}: excess {}",
                b.upper_excess
            );
        }
    }
}

#[test]
fn fock_qpis_lie_within_bounds() {
    let k = 1.0;
    let b = optimize_bounds(RegionFamily::HyperbolaSingle(k), &OptimizerConfig::default()).unwrap();
    for n in 0..6 {
        let v = qpi(&StateSpec::Fock(n), &Region::HyperbolaSingle(k), &planar())
            .unwrap()
            .value;
        assert!(
            v >= b.lower - 1e-6 && v <= b.upper + 1e-6,
            "n = {n}: {v} outside [{}, {}]",
            b.lower,
            b.upper
        );
    }
}
