use std::sync::Arc;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use schwinger::algebra::{apply_k_minus, apply_k_plus, sp2r_generators};
use schwinger::fock::{build_space, coherent_overlap, coherent_state, inner, FockSpace, StateVector};
use schwinger::groups::{haar_sample_su3, rep_operator, uniform_complex_sphere};
use schwinger::mc::chunk_rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_state(space: &Arc<FockSpace>, seed: u64, max_grade: usize) -> StateVector {
    let mut rng = chunk_rng(seed, 0);
    let mut amps = uniform_complex_sphere(&mut rng, space.dim());
    for (i, a) in amps.iter_mut().enumerate() {
        if space.grade(i) > max_grade {
            *a = c(0.0, 0.0);
        }
    }
    StateVector::from_amplitudes(space, amps).unwrap().normalized()
}

fn labels() -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-0.6f64..0.6, -0.6f64..0.6).prop_map(|(a, b)| c(a, b)), 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn k_plus_is_adjoint_of_k_minus(s1 in any::<u64>(), s2 in any::<u64>()) {
        let space = build_space(6, 6).unwrap();
        let phi = random_state(&space, s1, 6);
        let psi = random_state(&space, s2, 4);
        let lhs = inner(&phi, &apply_k_plus(&psi).unwrap()).unwrap();
        let rhs = inner(&apply_k_minus(&phi).unwrap(), &psi).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn sp2r_bracket_on_interior_grades(seed in any::<u64>()) {
        let space = build_space(6, 6).unwrap();
        let sp = sp2r_generators(&space).unwrap();
        let psi = random_state(&space, seed, 4);
        let mut r = sp.k_minus.apply(&sp.k_plus.apply(&psi).unwrap()).unwrap();
        r.axpy(c(-1.0, 0.0), &sp.k_plus.apply(&sp.k_minus.apply(&psi).unwrap()).unwrap()).unwrap();
        r.axpy(c(-2.0, 0.0), &sp.j0.apply(&psi).unwrap()).unwrap();
        prop_assert!(r.norm() < 1e-12);
    }

    #[test]
    fn su3_action_is_unitary_and_grade_preserving(a_seed in any::<u64>(), s in any::<u64>()) {
        let space = build_space(6, 4).unwrap();
        let a = haar_sample_su3(&mut chunk_rng(a_seed, 0));
        let u = rep_operator(&space, &a).unwrap();
        let psi = random_state(&space, s, 4);
        let moved = u.apply(&psi).unwrap();
        prop_assert!((moved.norm() - 1.0).abs() < 1e-12);
        for g in 0..=4 {
            let w = |x: &StateVector| space.grade_range(g).map(|i| x.amplitudes()[i].norm_sqr()).sum::<f64>();
            prop_assert!((w(&moved) - w(&psi)).abs() < 1e-12);
        }
    }

    #[test]
    fn coherent_state_norm_and_overlap(l in labels(), s in any::<u64>()) {
        let space = build_space(6, 12).unwrap();
        let coh = coherent_state(&space, &l, 1.0).unwrap();
        prop_assert!((coh.state.norm_sqr() + coh.tail - 1.0).abs() < 1e-12);
        let psi = random_state(&space, s, 5);
        let direct = inner(&psi, &coh.state).unwrap();
        prop_assert!((coherent_overlap(&psi, &l) - direct).norm() < 1e-13);
    }

    #[test]
    fn su3_moves_coherent_labels(l in labels(), a_seed in any::<u64>()) {
        let space = build_space(6, 10).unwrap();
        let a = haar_sample_su3(&mut chunk_rng(a_seed, 0));
        let z = [l[0], l[1], l[2]];
        let w = [l[3], l[4], l[5]];
        let coh = coherent_state(&space, &l, 1.0).unwrap();
        let moved = rep_operator(&space, &a).unwrap().apply(&coh.state).unwrap();
        let (az, aw) = (a.act(&z), a.act_conj(&w));
        let target = [az[0], az[1], az[2], aw[0], aw[1], aw[2]];
        let want = coherent_state(&space, &target, 1.0).unwrap();
        prop_assert!(moved.sub(&want.state).unwrap().norm() < 1e-12);
    }
}
