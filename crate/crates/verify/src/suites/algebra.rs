use num_complex::Complex64 as C64;
use schwinger::algebra::{
    casimir_value, check_mutual_commutation, check_sp2r_relations, check_su2_relations, check_su3_relations,
    gell_mann, hermiticity_residual, sp2r_generators, su2_u2_generators, su3_generators, INTERIOR_TOLERANCE,
};
use schwinger::basis::{canonical_state, irreps_up_to};
use schwinger::fock::{build_space, LinearOperator};

use crate::record::Ctx;

const DEFAULT_CUTOFF: usize = 8;

pub fn run(ctx: &mut Ctx) {
    let cutoff = ctx.cutoff(DEFAULT_CUTOFF);

    ctx.group("gell-mann", |ctx| {
        let gm = gell_mann();
        let h = 3f64.sqrt() / 2.0;
        let table = [
            ((1, 2, 3), 1.0),
            ((1, 4, 7), 0.5),
            ((1, 5, 6), -0.5),
            ((2, 4, 6), 0.5),
            ((2, 5, 7), 0.5),
            ((3, 4, 5), 0.5),
            ((3, 6, 7), -0.5),
            ((4, 5, 8), h),
            ((6, 7, 8), h),
        ];
        for ((a, b, c), want) in table {
            let got = gm.structure_constant(a - 1, b - 1, c - 1);
            ctx.close("gell-mann", &format!("f{a}{b}{c}"), got, want, 1e-14);
        }
        Ok(())
    });

    let space = match build_space(6, cutoff) {
        Ok(s) => s,
        Err(e) => return ctx.group("su3-commutators", |_| Err(e)),
    };
    let generators = su3_generators(&space).and_then(|q| Ok((q, sp2r_generators(&space)?)));
    let (su3, sp) = match generators {
        Ok(g) => g,
        Err(e) => return ctx.group("su3-commutators", |_| Err(e)),
    };

    ctx.group("su3-commutators", |ctx| {
        for c in check_su3_relations(&su3)?.checks {
            ctx.bound("su3-commutators", &c.name, c.residual, INTERIOR_TOLERANCE);
        }
        for (a, q) in su3.q.iter().enumerate() {
            ctx.bound("su3-commutators", &format!("hermitian-Q{}", a + 1), hermiticity_residual(q, 0)?, INTERIOR_TOLERANCE);
        }
        Ok(())
    });

    ctx.group("sp2r-definitions", |ctx| {
        let n = su3.n_a.add(&su3.n_b)?;
        let expected = LinearOperator::linear_combination(&[
            (C64::new(0.5, 0.0), &n),
            (C64::new(1.5, 0.0), &LinearOperator::identity(&space)),
        ])?;
        ctx.bound("sp2r-definitions", "J0-(N+3)/2", sp.j0.sub(&expected)?.max_abs(), INTERIOR_TOLERANCE);
        ctx.bound("sp2r-definitions", "hermitian-K1", hermiticity_residual(&sp.k1, 2)?, INTERIOR_TOLERANCE);
        ctx.bound("sp2r-definitions", "hermitian-K2", hermiticity_residual(&sp.k2, 2)?, INTERIOR_TOLERANCE);
        let margin = cutoff.saturating_sub(2);
        let adj = sp.k_plus.adjoint().sub(&sp.k_minus)?.max_abs_on_columns(margin);
        ctx.bound("sp2r-definitions", "K+adjoint-K-", adj, INTERIOR_TOLERANCE);
        Ok(())
    });

    ctx.group("sp2r-commutators", |ctx| {
        for c in check_sp2r_relations(&sp)?.checks {
            ctx.bound("sp2r-commutators", &c.name, c.residual, INTERIOR_TOLERANCE);
        }
        Ok(())
    });

    ctx.group("mutual-commutation", |ctx| {
        for c in check_mutual_commutation(&su3, &sp)?.checks {
            ctx.bound("mutual-commutation", &c.name, c.residual, INTERIOR_TOLERANCE);
        }
        Ok(())
    });

    ctx.group("casimir", |ctx| {
        let c2 = su3.casimir()?;
        for label in irreps_up_to(cutoff.min(4) as u32) {
            let mut rho = 0;
            while label.grade(rho) <= cutoff {
                for w in label.weights() {
                    let psi = canonical_state(&space, label, w, rho)?;
                    let mut r = c2.apply(&psi)?;
                    r.axpy(C64::new(-casimir_value(label.p, label.q), 0.0), &psi)?;
                    ctx.bound("casimir", &format!("{label};{w};rho={rho}"), r.norm(), 1e-10);
                }
                rho += 1;
            }
        }
        Ok(())
    });

    ctx.group("su2-commutators", |ctx| {
        let two = build_space(2, 3 * cutoff)?;
        for c in check_su2_relations(&su2_u2_generators(&two)?)?.checks {
            ctx.bound("su2-commutators", &c.name, c.residual, INTERIOR_TOLERANCE);
        }
        Ok(())
    });
}
