use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use schwinger::basis::{canonical_state, highest_weight_state, irreps_up_to, IrrepLabel};
use schwinger::coherent::{
    hw_to_su3_expansion, reconstruct_su3, representative_label, ExpansionLabel, OrbitClass, OrbitReport,
};
use schwinger::fock::{build_space, inner, StateVector};
use schwinger::groups::{haar_average, haar_sample_su3, uniform_complex_sphere, SectorLayout};
use schwinger::mc::chunk_rng;
use schwinger::resolutions::{
    coeffs_su3_h0, frame_group_commutator, mc_su3_h0_shell, FrameOperator, SectorLabel, WeightFunction,
};
use schwinger::specfun::log_factorial;

use super::infidelity_of;
use crate::record::Ctx;

const EXPANSION_CUTOFF: usize = 12;
const DEFAULT_P_MAX: u32 = 3;
const COVARIANCE_CUTOFF: usize = 6;
const TABLE_TAIL: f64 = 1e-3;
const STATE_TAIL: f64 = 1e-3;
const ZERO: C64 = C64::new(0.0, 0.0);

fn reports() -> schwinger::Result<Vec<(String, OrbitReport)>> {
    let mut out = vec![
        ("b;u=1.1".to_string(), OrbitReport { class: OrbitClass::B, u: 1.1, v: 0.0, xy: None, kappa: ZERO }),
        ("c;v=0.9".to_string(), OrbitReport { class: OrbitClass::C, u: 0.0, v: 0.9, xy: None, kappa: ZERO }),
    ];
    for (u, v) in [(0.5, 0.8), (1.0, 1.0), (1.2, 1.2)] {
        out.push((format!("d;u={u};v={v}"), OrbitReport::class_d(u, v, 0.0, 0.0)?));
    }
    Ok(out)
}

pub fn run(ctx: &mut Ctx) {
    let samples = ctx.samples();
    let p_max = ctx.p_max(DEFAULT_P_MAX);
    let cutoff = ctx.cutoff(EXPANSION_CUTOFF);

    ctx.group("hw-expansion", |ctx| {
        let space = build_space(6, cutoff)?;
        for (name, report) in reports()? {
            let table = hw_to_su3_expansion(&report, cutoff as u32, TABLE_TAIL)?;
            let coh = representative_label(&report).state(&space, STATE_TAIL)?;
            for irrep in irreps_up_to(cutoff.min(6) as u32) {
                let projected = inner(&highest_weight_state(&space, irrep)?, &coh.state)?;
                let c = table.coefficient(ExpansionLabel::Irrep(irrep)).unwrap_or(ZERO);
                ctx.bound("hw-expansion", &format!("{name};{irrep}"), (projected - c).norm(), 1e-13);
            }
            ctx.close("hw-expansion", &format!("{name};weight+tail"), table.weight() + table.tail, 1.0, 1e-12);
        }
        Ok(())
    });

    ctx.group("hw-reconstruction", |ctx| {
        let space = build_space(6, cutoff)?;
        let layout = Arc::new(SectorLayout::new(&space)?);
        let mut rng = chunk_rng(ctx.seed("hw-reconstruction"), 0);
        for (name, report) in reports()? {
            let table = hw_to_su3_expansion(&report, cutoff as u32, TABLE_TAIL)?;
            let rep = representative_label(&report);
            let rec = reconstruct_su3(&space, &report, &table, STATE_TAIL)?;
            let coh = rep.state(&space, STATE_TAIL)?;
            let slack = 1e-5 + coh.tail + table.tail + rec.tail;
            ctx.bound("hw-reconstruction", &format!("{name};representative"), infidelity_of(&rec.state, &coh.state)?, slack);
            let a = haar_sample_su3(&mut rng);
            let moved = layout.rep(&a).apply(&rec.state)?;
            let target = rep.transformed(&a).state(&space, STATE_TAIL)?;
            ctx.bound("hw-reconstruction", &format!("{name};rotated"), infidelity_of(&moved, &target.state)?, slack);
        }
        Ok(())
    });

    ctx.group("schur-su3", |ctx| {
        let cases = [
            (IrrepLabel::new(1, 0), None),
            (IrrepLabel::new(0, 1), None),
            (IrrepLabel::new(2, 0), None),
            (IrrepLabel::new(1, 1), None),
            (IrrepLabel::new(1, 1), Some(1usize)),
        ];
        for (irrep, which) in cases {
            let space = build_space(6, irrep.grade(0))?;
            let layout = Arc::new(SectorLayout::new(&space)?);
            let weights = irrep.weights();
            let basis: Vec<StateVector> =
                weights.iter().map(|&w| canonical_state(&space, irrep, w, 0)).collect::<schwinger::Result<_>>()?;
            let (psi, label) = match which {
                None => (highest_weight_state(&space, irrep)?, "hw".to_string()),
                Some(k) => (basis[k].clone(), weights[k].to_string()),
            };
            let avg = haar_average(&layout, &[psi], samples, ctx.seed("schur-su3"))?;
            let d = irrep.dimension() as f64;
            let n = avg.dim();
            for a in 0..n {
                for b in 0..n {
                    let (i, j) = (avg.indices[a], avg.indices[b]);
                    let want: C64 = basis.iter().map(|e| e.amplitudes()[i] * e.amplitudes()[j].conj()).sum::<C64>() / d;
                    let k = a * n + b;
                    let id = format!("{irrep};{label};({a},{b})");
                    ctx.mc("schur-su3", &format!("{id};re"), &avg.re[k], want.re, 1e-14);
                    ctx.mc("schur-su3", &format!("{id};im"), &avg.im[k], want.im, 1e-14);
                }
            }
        }
        Ok(())
    });

    ctx.group("frame-constant", |ctx| {
        let dec = coeffs_su3_h0(&WeightFunction::Constant, p_max.max(4))?;
        for t in &dec.terms {
            let SectorLabel::Irrep { irrep, .. } = t.sector else { continue };
            let (p, q) = (irrep.p as u64, irrep.q as u64);
            let ln = log_factorial(p + 2) + log_factorial(q + 2) - log_factorial(p) - log_factorial(q);
            let want = 2.0 / PI * ln.exp() / (4.0 * irrep.dimension() as f64);
            ctx.close("frame-constant", &format!("{irrep}"), t.coefficient, want, 1e-10 * want.max(1.0));
        }
        Ok(())
    });

    ctx.group("frame-shell", |ctx| {
        for (u0, v0) in [(1.0, 1.0), (1.2, 0.8)] {
            for c in mc_su3_h0_shell(u0, v0, p_max, samples, ctx.seed("frame-shell"))? {
                let detail = format!("u0={u0};v0={v0};{};{}", c.sector, c.component.as_deref().unwrap_or(""));
                ctx.mc("frame-shell", &detail, &c.estimate, c.closed_form, c.slack);
            }
        }
        Ok(())
    });

    ctx.group("frame-covariance", |ctx| {
        let space = build_space(6, COVARIANCE_CUTOFF)?;
        let layout = Arc::new(SectorLayout::new(&space)?);
        let dec = coeffs_su3_h0(&WeightFunction::ProductShell { u0: 1.0, v0: 1.0 }, COVARIANCE_CUTOFF as u32)?;
        let frame = FrameOperator::assemble(&space, &dec, 1e-10)?;
        let rank: u64 = irreps_up_to(COVARIANCE_CUTOFF as u32).iter().map(|l| l.dimension()).sum();
        ctx.exact("frame-covariance", "rank", frame.rank() as i128, rank as i128);
        let mut rng = chunk_rng(ctx.seed("frame-covariance"), 0);
        let probes = (0..3)
            .map(|_| StateVector::from_amplitudes(&space, uniform_complex_sphere(&mut rng, space.dim())))
            .collect::<schwinger::Result<Vec<_>>>()?;
        for i in 0..5 {
            let a = haar_sample_su3(&mut rng);
            let dev = frame_group_commutator(&frame, &layout, &a, &probes)?;
            ctx.bound("frame-covariance", &format!("rotation {i};max|[F,U(A)]psi|"), dev, 1e-12);
        }
        Ok(())
    });
}
