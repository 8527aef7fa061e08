use std::sync::Arc;

use num_complex::Complex64 as C64;
use schwinger::algebra::{apply_k_minus, sp2r_generators, su3_generators};
use schwinger::basis::{
    canonical_state, irreps_up_to, kappa_state, sp_kappa_coefficients, su2_scalar_kappa_state, su2_scalar_state,
};
use schwinger::coherent::{
    classify_orbit, hw_to_su3_expansion, reconstruct_su3, representative_label, CoherentLabel, ExpansionLabel,
    OrbitClass, OrbitReport, ORBIT_TOLERANCE,
};
use schwinger::fock::{build_space, inner};
use schwinger::groups::{haar_sample_su3, SectorLayout};
use schwinger::mc::chunk_rng;
use schwinger::resolutions::{coeffs_class_e, coeffs_class_e_smeared, mc_class_e, SectorLabel};

use super::infidelity_of;
use crate::record::Ctx;

const OVERLAP_CUTOFF: usize = 14;
const RECONSTRUCTION_CUTOFF: usize = 12;
const SCALAR_CUTOFF: usize = 10;
const DEFAULT_P_MAX: u32 = 3;
const STATE_TAIL: f64 = 1e-3;
const TOWER_TAIL: f64 = 1e-6;
const POINTS: [(f64, f64, f64); 3] = [(1.0, 1.0, 0.3), (0.9, 1.1, -1.0), (1.2, 0.8, 2.5)];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

pub fn run(ctx: &mut Ctx) {
    let samples = ctx.samples();
    let p_max = ctx.p_max(DEFAULT_P_MAX);

    ctx.group("class-e-representative", |ctx| {
        for (u, v, alpha) in POINTS {
            let report = OrbitReport::class_e(u, v, alpha)?;
            let label = representative_label(&report);
            let zero = c(0.0, 0.0);
            let shape = label.z[..2].iter().chain(&label.w[..2]).all(|x| *x == zero);
            ctx.holds("class-e-representative", &format!("u={u};v={v};alpha={alpha};third mode only"), shape, "support outside the third mode");
            let back = classify_orbit(&label, ORBIT_TOLERANCE);
            ctx.holds("class-e-representative", &format!("u={u};v={v};alpha={alpha};class"), back.class == OrbitClass::E, &format!("classified as {}", back.class));
            ctx.bound(
                "class-e-representative",
                &format!("u={u};v={v};alpha={alpha};kappa"),
                (back.kappa - C64::from_polar(u * v, alpha)).norm(),
                1e-15,
            );
            ctx.close("class-e-representative", &format!("u={u};v={v};alpha={alpha};t"), back.t(), 1.0, 1e-15);
        }
        // labels just inside and at the boundary of the disk
        for (gap, want) in [(1e-6f64, OrbitClass::D), (1e-12, OrbitClass::E)] {
            let x = (1.0 - gap).sqrt();
            let y = gap.sqrt();
            let label = CoherentLabel::new([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], [c(x, 0.0), c(y, 0.0), c(0.0, 0.0)]);
            let r = classify_orbit(&label, ORBIT_TOLERANCE);
            ctx.holds("class-e-representative", &format!("1-t^2={gap:e};class"), r.class == want, &format!("classified as {}", r.class));
        }
        Ok(())
    });

    ctx.group("su2-scalar-states", |ctx| {
        let space = build_space(6, SCALAR_CUTOFF)?;
        let su3 = su3_generators(&space)?;
        let sp = sp2r_generators(&space)?;
        let i2 = su3.isospin_squared()?;
        let y = su3.hypercharge();
        for irrep in irreps_up_to(4) {
            for rho in 0..=1u32 {
                if irrep.grade(rho) > space.cutoff() {
                    continue;
                }
                let psi = su2_scalar_state(&space, irrep, rho)?;
                let id = format!("{irrep};rho={rho}");
                ctx.close("su2-scalar-states", &format!("{id};norm"), psi.norm(), 1.0, 1e-13);
                ctx.bound("su2-scalar-states", &format!("{id};|I^2 psi|"), i2.apply(&psi)?.norm(), 1e-12);
                let mut r = y.apply(&psi)?;
                r.axpy(c(-2.0 * (irrep.q as f64 - irrep.p as f64) / 3.0, 0.0), &psi)?;
                ctx.bound("su2-scalar-states", &format!("{id};|(Y - 2(q-p)/3) psi|"), r.norm(), 1e-12);
                let mut r = sp.j0.apply(&psi)?;
                r.axpy(c(-(irrep.k() + rho as f64), 0.0), &psi)?;
                ctx.bound("su2-scalar-states", &format!("{id};|(J0 - m) psi|"), r.norm(), 1e-12);
                if rho == 0 {
                    ctx.bound("su2-scalar-states", &format!("{id};|K- psi|"), apply_k_minus(&psi)?.norm(), 1e-12);
                }
                let canon = canonical_state(&space, irrep, irrep.su2_scalar_weight(), rho)?;
                ctx.close("su2-scalar-states", &format!("{id};|<canonical|psi>|"), inner(&canon, &psi)?.norm(), 1.0, 1e-12);
            }
        }
        Ok(())
    });

    ctx.group("su2-scalar-towers", |ctx| {
        let space = build_space(6, ctx.cutoff(OVERLAP_CUTOFF))?;
        for kappa in [c(0.5, 0.0), C64::from_polar(1.0, 0.3), C64::from_polar(1.44, 2.5)] {
            for irrep in irreps_up_to(p_max) {
                let t = su2_scalar_kappa_state(&space, irrep, kappa, 1.0)?;
                let mut r = apply_k_minus(&t.state)?;
                r.axpy(-kappa, &t.state)?;
                let rho_max = (space.cutoff() as u32 - irrep.p - irrep.q) / 2;
                let top = sp_kappa_coefficients(irrep.k2(), kappa, rho_max)?[rho_max as usize].norm();
                let id = format!("kappa={kappa};{irrep}");
                ctx.close("su2-scalar-towers", &format!("{id};|K- psi - kappa psi|"), r.norm(), kappa.norm() * top, 1e-12);
                let other = kappa_state(&space, irrep, irrep.su2_scalar_weight(), kappa, 1.0)?;
                let f = inner(&other.state, &t.state)?.norm();
                ctx.close("su2-scalar-towers", &format!("{id};|<kappa basis|psi>|"), f, 1.0 - t.tail, 1e-12);
            }
        }
        Ok(())
    });

    ctx.group("class-e-expansion", |ctx| {
        let space = build_space(6, ctx.cutoff(OVERLAP_CUTOFF))?;
        for (u, v, alpha) in POINTS {
            let report = OrbitReport::class_e(u, v, alpha)?;
            let table = hw_to_su3_expansion(&report, p_max, 1.0)?;
            let coh = representative_label(&report).state(&space, STATE_TAIL)?;
            for irrep in irreps_up_to(p_max) {
                let fid = su2_scalar_kappa_state(&space, irrep, report.kappa, TOWER_TAIL)?;
                let projected = inner(&fid.state, &coh.state)?;
                let want = table.coefficient(ExpansionLabel::Irrep(irrep)).unwrap_or(c(f64::NAN, 0.0));
                let id = format!("u={u};v={v};alpha={alpha};{irrep}");
                ctx.bound("class-e-expansion", &id, (projected - want).norm(), 1e-6 + fid.tail + coh.tail);
            }
            let full = hw_to_su3_expansion(&report, 40, 1e-12)?;
            ctx.close("class-e-expansion", &format!("u={u};v={v};alpha={alpha};weight+tail"), full.weight() + full.tail, 1.0, 1e-12);
        }
        Ok(())
    });

    ctx.group("class-e-reconstruction", |ctx| {
        let space = build_space(6, ctx.cutoff(RECONSTRUCTION_CUTOFF))?;
        let layout = Arc::new(SectorLayout::new(&space)?);
        let mut rng = chunk_rng(ctx.seed("class-e-reconstruction"), 0);
        for (u, v, alpha) in [(1.0, 1.0, 0.3), (1.2, 1.2, -1.0), (0.5, 1.1, 2.0)] {
            let report = OrbitReport::class_e(u, v, alpha)?;
            let table = hw_to_su3_expansion(&report, space.cutoff() as u32, STATE_TAIL)?;
            // towers of the top irreps are cut by the space; both sides are grade projections
            let rec = reconstruct_su3(&space, &report, &table, 1.0)?;
            let rep = representative_label(&report);
            let coh = rep.state(&space, STATE_TAIL)?;
            let slack = 1e-5 + table.tail + coh.tail;
            let id = format!("u={u};v={v};alpha={alpha}");
            ctx.bound("class-e-reconstruction", &format!("{id};representative"), infidelity_of(&rec.state, &coh.state)?, slack);
            let a = haar_sample_su3(&mut rng);
            let moved = layout.rep(&a).apply(&rec.state)?;
            let target = rep.transformed(&a).state(&space, STATE_TAIL)?;
            ctx.bound("class-e-reconstruction", &format!("{id};rotated"), infidelity_of(&moved, &target.state)?, slack);
        }
        Ok(())
    });

    ctx.group("frame-class-e", |ctx| {
        let cutoff = ctx.cutoff(OVERLAP_CUTOFF);
        for (u, v, alpha) in POINTS[..2].iter().copied() {
            for chk in mc_class_e(u, v, alpha, p_max, cutoff, samples, ctx.seed("frame-class-e"))? {
                let detail = format!("u={u};v={v};alpha={alpha};{};{}", chk.sector, chk.component.as_deref().unwrap_or(""));
                ctx.mc("frame-class-e", &detail, &chk.estimate, chk.closed_form, chk.slack);
            }
        }
        // the averaged dyad has unit trace: sum over sectors of d(p,q) C(p,q) = 1
        for (u, v, alpha) in POINTS {
            let dec = coeffs_class_e(u, v, alpha, 40)?;
            let trace: f64 = dec
                .terms
                .iter()
                .map(|t| match t.sector {
                    SectorLabel::Irrep { irrep, .. } => irrep.dimension() as f64 * t.coefficient,
                    _ => f64::NAN,
                })
                .sum();
            ctx.close("frame-class-e", &format!("u={u};v={v};alpha={alpha};trace"), trace, 1.0, 1e-12);
        }
        Ok(())
    });

    ctx.group("frame-class-e-smeared", |ctx| {
        let f0 = |u: f64| (-(u - 1.0).powi(2) / 0.1).exp();
        for kappa in [C64::from_polar(0.8, 0.4), C64::from_polar(1.1, -2.0)] {
            let dec = coeffs_class_e_smeared(&f0, kappa, p_max)?;
            for t in &dec.terms {
                let SectorLabel::Irrep { irrep, .. } = t.sector else { continue };
                let g = |u: f64| {
                    let one = coeffs_class_e(u, kappa.norm() / u, kappa.arg(), irrep.p + irrep.q).ok();
                    let cu = one
                        .and_then(|d| {
                            d.terms.into_iter().find(|x| matches!(x.sector, SectorLabel::Irrep { irrep: i, .. } if i == irrep))
                        })
                        .map_or(f64::NAN, |x| x.coefficient);
                    f0(u) / u * cu
                };
                let want = simpson(g, 0.02, 4.0, 4000);
                ctx.close("frame-class-e-smeared", &format!("kappa={kappa};{irrep}"), t.coefficient, want, 1e-9 * want.abs());
            }
        }
        Ok(())
    });
}
