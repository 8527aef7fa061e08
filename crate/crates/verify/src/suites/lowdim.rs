use num_complex::Complex64 as C64;
use schwinger::coherent::{
    hw_to_su2_expansion, reconstruct_su2, su2_label, su2_scs_overlap, su2_scs_state, ExpansionLabel,
};
use schwinger::fock::{build_space, coherent_state, inner, Occupation, StateVector};
use schwinger::groups::{rep_operator_uniform, su2_section};
use schwinger::resolutions::{
    coeffs_1dof, coeffs_2dof, gcs_commutator_check, klauder_mc_check, mc_1dof_shell, mc_2dof_shell, schur_s2_average,
    FrameCheck, KlauderRoute, WeightFunction,
};

use super::infidelity_of;
use crate::record::Ctx;

const N_MAX: u32 = 6;
const J2_MAX: u32 = 6;
const TWO_MODE_CUTOFF: usize = 40;
const ANGLES: [(f64, f64); 4] = [(0.0, 0.0), (0.7, 1.1), (1.9, -2.3), (3.0, 0.4)];

fn frame_records(ctx: &mut Ctx, group: &str, prefix: &str, checks: &[FrameCheck]) {
    for c in checks {
        let detail = match &c.component {
            Some(m) => format!("{prefix};{};{m}", c.sector),
            None => format!("{prefix};{}", c.sector),
        };
        ctx.mc(group, &detail, &c.estimate, c.closed_form, c.slack);
    }
}

fn occ(c: &[u16]) -> Occupation {
    Occupation::new(c)
}

pub fn run(ctx: &mut Ctx) {
    let samples = ctx.samples();

    ctx.group("klauder-1dof", |ctx| {
        for n0 in 0..=2 {
            for t in coeffs_1dof(&WeightFunction::Constant, n0, N_MAX)?.terms {
                ctx.close("klauder-1dof", &format!("quadrature;n0={n0};{}", t.sector), t.coefficient, 1.0, 1e-8);
            }
        }
        let pairs = [(occ(&[0]), occ(&[0])), (occ(&[1]), occ(&[1])), (occ(&[3]), occ(&[3])), (occ(&[0]), occ(&[1])), (occ(&[1]), occ(&[3]))];
        for c in klauder_mc_check(1, &pairs, KlauderRoute::Gaussian, samples, ctx.seed("klauder-1dof"))? {
            ctx.mc("klauder-1dof", &format!("gaussian;<{}|.|{}>;re", c.row, c.col), &c.re, c.expected, 0.0);
            ctx.mc("klauder-1dof", &format!("gaussian;<{}|.|{}>;im", c.row, c.col), &c.im, 0.0, 0.0);
        }
        Ok(())
    });

    ctx.group("shell-1dof", |ctx| {
        for r0 in [1.0, 1.5] {
            let checks = mc_1dof_shell(r0, 0, N_MAX, samples, ctx.seed("shell-1dof"))?;
            frame_records(ctx, "shell-1dof", &format!("r0={r0}"), &checks);
        }
        Ok(())
    });

    ctx.group("displaced-number-shell", |ctx| {
        for n0 in 1..=3 {
            for r0 in [1.0, 1.5] {
                let checks = mc_1dof_shell(r0, n0, N_MAX, samples, ctx.seed("displaced-number-shell"))?;
                frame_records(ctx, "displaced-number-shell", &format!("n0={n0};r0={r0}"), &checks);
            }
        }
        Ok(())
    });

    ctx.group("su2-section", |ctx| {
        let space = build_space(2, J2_MAX as usize)?;
        for (theta, phi) in ANGLES {
            let a = su2_section(theta, phi);
            let col = [a.0[(0, 0)], a.0[(1, 0)]];
            let want = [
                C64::from_polar((theta / 2.0).cos(), -phi / 2.0),
                C64::from_polar((theta / 2.0).sin(), phi / 2.0),
            ];
            let dev = (col[0] - want[0]).norm().max((col[1] - want[1]).norm());
            ctx.bound("su2-section", &format!("column;theta={theta};phi={phi}"), dev, 1e-15);
            let u = rep_operator_uniform(&space, &a.to_dmatrix())?;
            for j2 in 0..=J2_MAX {
                let top = StateVector::basis(&space, space.index(&occ(&[j2 as u16, 0])).expect("in space"));
                let moved = u.apply(&top)?;
                let scs = su2_scs_state(&space, j2, theta, phi)?;
                let dev = moved.sub(&scs)?.norm();
                ctx.bound("su2-section", &format!("U(A)|j,j>;2j={j2};theta={theta};phi={phi}"), dev, 1e-12);
            }
        }
        Ok(())
    });

    ctx.group("su2-scs-overlap", |ctx| {
        let space = build_space(2, J2_MAX as usize)?;
        ctx.close("su2-scs-overlap", "example;2j=1", su2_scs_overlap(1, 0.0, 0.0, std::f64::consts::FRAC_PI_2, 0.0).re, 0.5f64.sqrt(), 1e-15);
        for j2 in 0..=J2_MAX {
            for &(tp, pp) in &ANGLES {
                for &(t, p) in &ANGLES {
                    let closed = su2_scs_overlap(j2, tp, pp, t, p);
                    let fock = inner(&su2_scs_state(&space, j2, tp, pp)?, &su2_scs_state(&space, j2, t, p)?)?;
                    ctx.bound("su2-scs-overlap", &format!("2j={j2};({tp},{pp});({t},{p})"), (closed - fock).norm(), 1e-13);
                }
            }
        }
        Ok(())
    });

    ctx.group("su2-expansion", |ctx| {
        let space = build_space(2, TWO_MODE_CUTOFF)?;
        let table = hw_to_su2_expansion(1.0, 0.0, 1)?;
        let c = table.coefficient(ExpansionLabel::Spin(1)).expect("present");
        ctx.close("su2-expansion", "example;r=1;2j=1", c.re, (-0.5f64).exp(), 1e-15);
        for (r, alpha, theta, phi) in [(0.5, 0.3, 0.7, 1.1), (1.0, 0.0, 1.9, -2.3), (1.2, -1.0, 3.0, 0.4)] {
            let z = su2_label(r, alpha, theta, phi);
            let coh = coherent_state(&space, &z, 1e-6)?;
            let table = hw_to_su2_expansion(r, alpha, TWO_MODE_CUTOFF as u32)?;
            for j2 in 0..=J2_MAX {
                let proj = inner(&su2_scs_state(&space, j2, theta, phi)?, &coh.state)?;
                let c = table.coefficient(ExpansionLabel::Spin(j2)).expect("present");
                ctx.bound("su2-expansion", &format!("coefficient;r={r};2j={j2}"), (proj - c).norm(), 1e-12);
            }
            ctx.close("su2-expansion", &format!("normalization;r={r}"), table.weight() + table.tail, 1.0, 1e-12);
            let rec = reconstruct_su2(&space, &table, theta, phi)?;
            let inf = infidelity_of(&rec, &coh.state)?;
            ctx.bound("su2-expansion", &format!("reconstruction;r={r}"), inf, 1e-5 + coh.tail + table.tail);
        }
        Ok(())
    });

    ctx.group("schur-s2", |ctx| {
        for j2 in 0..=2u32 {
            let avg = schur_s2_average(j2, samples, ctx.seed("schur-s2"));
            let d = avg.dim();
            for r in 0..d {
                for c in 0..d {
                    let want = if r == c { 1.0 / d as f64 } else { 0.0 };
                    let k = r * d + c;
                    ctx.mc("schur-s2", &format!("2j={j2};({r},{c});re"), &avg.re[k], want, 1e-14);
                    ctx.mc("schur-s2", &format!("2j={j2};({r},{c});im"), &avg.im[k], 0.0, 1e-14);
                }
            }
        }
        Ok(())
    });

    ctx.group("klauder-2dof", |ctx| {
        for t in coeffs_2dof(&WeightFunction::Constant, J2_MAX)?.terms {
            ctx.close("klauder-2dof", &format!("quadrature;{}", t.sector), t.coefficient, 1.0, 1e-8);
        }
        let pairs = [
            (occ(&[0, 0]), occ(&[0, 0])),
            (occ(&[1, 0]), occ(&[1, 0])),
            (occ(&[1, 1]), occ(&[1, 1])),
            (occ(&[1, 0]), occ(&[0, 1])),
            (occ(&[2, 0]), occ(&[1, 1])),
        ];
        for c in klauder_mc_check(2, &pairs, KlauderRoute::Gaussian, samples, ctx.seed("klauder-2dof"))? {
            ctx.mc("klauder-2dof", &format!("gaussian;<{}|.|{}>;re", c.row, c.col), &c.re, c.expected, 0.0);
            ctx.mc("klauder-2dof", &format!("gaussian;<{}|.|{}>;im", c.row, c.col), &c.im, 0.0, 0.0);
        }
        Ok(())
    });

    ctx.group("shell-2dof", |ctx| {
        for r0 in [1.0, 1.3] {
            let checks = mc_2dof_shell(r0, J2_MAX, samples, ctx.seed("shell-2dof"))?;
            frame_records(ctx, "shell-2dof", &format!("r0={r0}"), &checks);
        }
        Ok(())
    });

    ctx.group("gcs-noncommutation", |ctx| {
        let u = su2_section(1.1, 0.4);
        let seed = ctx.seed("gcs-noncommutation");
        let vac = gcs_commutator_check(1.0, occ(&[0, 0]), &u, 2, samples, seed)?;
        ctx.bound("gcs-noncommutation", "vacuum;max|mean|/sigma", vac.max_significance, 5.0);
        let one = gcs_commutator_check(1.0, occ(&[1, 0]), &u, 2, samples, seed)?;
        ctx.at_least(
            "gcs-noncommutation",
            "fiducial|1,0>;max|mean|/sigma",
            one.max_significance,
            10.0,
            "commutator entries must differ from zero by at least 10 standard errors",
        );
        Ok(())
    });
}
