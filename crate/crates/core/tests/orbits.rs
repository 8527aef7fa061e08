use num_complex::Complex64 as C64;
use proptest::prelude::*;
use schwinger::basis::{canonical_state, IrrepLabel};
use schwinger::coherent::{classify_orbit, representative_label, CoherentLabel, OrbitClass, ORBIT_TOLERANCE};
use schwinger::fock::{build_space, inner};
use schwinger::groups::haar_sample_su3;
use schwinger::mc::chunk_rng;

fn triple() -> impl Strategy<Value = [C64; 3]> {
    prop::array::uniform3((-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| C64::new(a, b)))
}

proptest! {
    #[test]
    fn invariants_survive_rotation(z in triple(), w in triple(), seed in any::<u64>()) {
        let label = CoherentLabel::new(z, w);
        let before = classify_orbit(&label, ORBIT_TOLERANCE);
        prop_assume!(before.class == OrbitClass::D);
        let a = haar_sample_su3(&mut chunk_rng(seed, 0));
        let after = classify_orbit(&label.transformed(&a), ORBIT_TOLERANCE);
        prop_assert_eq!(after.class, before.class);
        prop_assert!((after.u - before.u).abs() < 1e-12 * before.u.max(1.0));
        prop_assert!((after.v - before.v).abs() < 1e-12 * before.v.max(1.0));
        prop_assert!((after.kappa - before.kappa).norm() < 1e-11 * (before.u * before.v).max(1.0));
    }

    #[test]
    fn representative_keeps_invariants(z in triple(), w in triple()) {
        let report = classify_orbit(&CoherentLabel::new(z, w), ORBIT_TOLERANCE);
        prop_assume!(report.class == OrbitClass::D);
        let back = classify_orbit(&representative_label(&report), ORBIT_TOLERANCE);
        prop_assert_eq!(back.class, report.class);
        prop_assert!((back.u - report.u).abs() < 1e-12 * report.u.max(1.0));
        prop_assert!((back.v - report.v).abs() < 1e-12 * report.v.max(1.0));
        prop_assert!((back.kappa - report.kappa).norm() < 1e-11 * (report.u * report.v).max(1.0));
    }

    #[test]
    fn canonical_states_of_distinct_irreps_are_orthogonal(p in 0u32..3, q in 0u32..3, i in 0usize..64, j in 0usize..64, rho in 0u32..2) {
        let space = build_space(6, 8).unwrap();
        let l = IrrepLabel::new(p, q);
        let ws = l.weights();
        let (a, b) = (ws[i % ws.len()], ws[j % ws.len()]);
        let x = canonical_state(&space, l, a, rho).unwrap();
        let y = canonical_state(&space, l, b, rho).unwrap();
        let want = if a == b { 1.0 } else { 0.0 };
        prop_assert!((inner(&x, &y).unwrap() - want).norm() < 1e-12);
        let other = IrrepLabel::new(q, p + 1);
        if other.grade(rho) <= space.cutoff() {
            for w in other.weights() {
                let z = canonical_state(&space, other, w, rho).unwrap();
                prop_assert!(inner(&x, &z).unwrap().norm() < 1e-12);
            }
        }
    }
}
