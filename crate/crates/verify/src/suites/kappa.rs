use std::sync::Arc;

use num_complex::Complex64 as C64;
use schwinger::algebra::apply_k_minus;
use schwinger::basis::{
    canonical_state, irreps_up_to, kappa_state, sp_kappa_coefficients, sp_kappa_tail, IrrepLabel,
};
use schwinger::coherent::{
    hw_to_su3_expansion, nprime_squared, nprime_squared_double_sum, overlap_kappa, reconstruct_su3,
    representative_label, OrbitReport,
};
use schwinger::fock::{build_space, inner, Truncated};
use schwinger::resolutions::{
    coeffs_su3_h0, coeffs_su3_kappa, mc_su3_kappa_shell, sp_kappa_measure_check, FrameDecomposition, MeasureOrder,
    SectorLabel, WeightFunction,
};
use schwinger::specfun::{hyp0f1, hyp0f1_complex, log_factorial};

use super::infidelity_of;
use crate::record::Ctx;

const OVERLAP_CUTOFF: usize = 14;
const RECONSTRUCTION_CUTOFF: usize = 12;
const DEFAULT_P_MAX: u32 = 3;
const STATE_TAIL: f64 = 1e-3;
const TOWER_TAIL: f64 = 1e-6;
const OVERLAP_POINTS: [(f64, f64, f64, f64); 3] = [(1.0, 1.0, 0.5, 0.0), (1.0, 1.2, 0.3, 0.4), (0.8, 1.0, 0.0, 0.0)];
const LIMIT_KAPPAS: [f64; 3] = [0.1, 0.01, 0.001];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn planar_bump() -> WeightFunction {
    WeightFunction::Planar(Arc::new(|u: f64, v: f64| (-(u - 1.0).powi(2) / 0.1 - (v - 1.1).powi(2) / 0.1).exp()))
}

/// Composite Simpson rule with n (even) panels.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// The κ-sector coefficient of the bump weight by nested Simpson over uv > |κ|,
/// written out from the integral definition.
fn bump_kappa_simpson(irrep: IrrepLabel, kappa: f64) -> schwinger::Result<f64> {
    let (p, q) = (irrep.p as i32, irrep.q as i32);
    let d = irrep.dimension() as f64;
    let pre = 2.0 / std::f64::consts::PI * hyp0f1(irrep.k2() as f64, kappa * kappa)?
        / d
        / log_factorial((p + q + 1) as u64).exp();
    let (lo, hi) = (0.05, 3.0);
    let inner_v = |u: f64| {
        let v0 = (kappa / u).max(lo);
        if v0 >= hi {
            return 0.0;
        }
        simpson(
            |v| {
                let t = (kappa / (u * v)).min(1.0);
                let w = (-(u - 1.0).powi(2) / 0.1 - (v - 1.1).powi(2) / 0.1).exp();
                w * u.powi(5 + 2 * p)
                    * v.powi(5 + 2 * q)
                    * (-(u * u + v * v)).exp()
                    * (1.0 - t * t)
                    * nprime_squared(irrep, t).unwrap_or(f64::NAN)
            },
            v0,
            hi,
            600,
        )
    };
    Ok(pre * simpson(inner_v, lo, hi, 600))
}

fn coefficient_of(dec: &FrameDecomposition, irrep: IrrepLabel) -> f64 {
    dec.terms
        .iter()
        .find(|t| matches!(t.sector, SectorLabel::Irrep { irrep: i, .. } if i == irrep))
        .map_or(f64::NAN, |t| t.coefficient)
}

pub fn run(ctx: &mut Ctx) {
    let samples = ctx.samples();
    let p_max = ctx.p_max(DEFAULT_P_MAX);

    ctx.group("sp-coefficients", |ctx| {
        for k2 in [3u32, 4, 5, 7] {
            for kappa in [c(0.5, 0.0), c(0.3, 0.4), c(-1.0, 1.0), c(2.0, 0.0)] {
                let rho_max = 12;
                let cs = sp_kappa_coefficients(k2, kappa, rho_max)?;
                let weight: f64 = cs.iter().map(|x| x.norm_sqr()).sum();
                let tail = sp_kappa_tail(k2, kappa.norm_sqr(), rho_max)?;
                ctx.close("sp-coefficients", &format!("2k={k2};kappa={kappa};norm"), weight + tail, 1.0, 1e-13);
            }
        }
        // the K+ tower inside the Fock space reproduces the same coefficients
        let space = build_space(6, 10)?;
        for (irrep, kappa) in [(IrrepLabel::new(0, 0), c(0.5, 0.0)), (IrrepLabel::new(1, 1), c(0.3, 0.4))] {
            let w = irrep.highest_weight();
            let psi = kappa_state(&space, irrep, w, kappa, 1.0)?.state;
            let cs = sp_kappa_coefficients(irrep.k2(), kappa, 4)?;
            for (rho, want) in cs.iter().enumerate() {
                if irrep.grade(rho as u32) > space.cutoff() {
                    break;
                }
                let got = inner(&canonical_state(&space, irrep, w, rho as u32)?, &psi)?;
                ctx.bound("sp-coefficients", &format!("tower;{irrep};kappa={kappa};rho={rho}"), (got - want).norm(), 1e-13);
            }
        }
        Ok(())
    });

    ctx.group("sp-overlap", |ctx| {
        let kappas = [c(0.5, 0.0), c(0.3, 0.4), c(-1.0, 0.7)];
        for k2 in [3u32, 4, 5] {
            for &a in &kappas {
                for &b in &kappas {
                    let ca = sp_kappa_coefficients(k2, a, 80)?;
                    let cb = sp_kappa_coefficients(k2, b, 80)?;
                    let series: C64 = ca.iter().zip(&cb).map(|(x, y)| x.conj() * y).sum();
                    let closed = hyp0f1_complex(k2 as f64, a.conj() * b)?
                        / (hyp0f1(k2 as f64, a.norm_sqr())? * hyp0f1(k2 as f64, b.norm_sqr())?).sqrt();
                    ctx.bound("sp-overlap", &format!("2k={k2};<{a}|{b}>"), (series - closed).norm(), 1e-13);
                }
            }
        }
        Ok(())
    });

    ctx.group("sp-measure", |ctx| {
        let rhos: Vec<u32> = (0..=5).collect();
        for k2 in [3u32, 4, 5] {
            let r = sp_kappa_measure_check(k2, &rhos, MeasureOrder::TwoKMinusOne)?;
            for e in &r.diagonal {
                ctx.close("sp-measure", &format!("2k={k2};2m={}", e.m2), e.value, 1.0, 1e-6);
            }
            ctx.bound("sp-measure", &format!("2k={k2};off-diagonal"), r.max_offdiagonal, 1e-12);
        }
        // the order printed with the measure does not normalize it
        let printed = sp_kappa_measure_check(3, &[0], MeasureOrder::HalfMinusK)?;
        ctx.at_least(
            "sp-measure",
            "printed order 1/2-k;2k=3;2m=3;|value-1|",
            printed.max_deviation,
            0.1,
            "the K_{1/2-k} measure gives Gamma(5/2)Gamma(3/2)/2 = 0.589 here; the K_{2k-1} measure is used",
        );
        Ok(())
    });

    ctx.group("kappa-eigenstates", |ctx| {
        let space = build_space(6, ctx.cutoff(OVERLAP_CUTOFF))?;
        for kappa in [c(0.5, 0.0), c(0.3, -0.4), c(1.0, 0.0)] {
            for irrep in irreps_up_to(2) {
                for w in irrep.weights() {
                    let Truncated { state, .. } = kappa_state(&space, irrep, w, kappa, 1.0)?;
                    let mut r = apply_k_minus(&state)?;
                    r.axpy(-kappa, &state)?;
                    // the tower stops at the top grade; K- psi - kappa psi is -kappa times that last term
                    let rho_max = (space.cutoff() as u32 - irrep.p - irrep.q) / 2;
                    let top = sp_kappa_coefficients(irrep.k2(), kappa, rho_max)?[rho_max as usize].norm();
                    let id = format!("kappa={kappa};{irrep};{w}");
                    ctx.close("kappa-eigenstates", &id, r.norm(), kappa.norm() * top, 1e-12);
                }
            }
        }
        for irrep in irreps_up_to(3) {
            for w in irrep.weights() {
                let a = kappa_state(&space, irrep, w, c(0.0, 0.0), 0.0)?.state;
                let b = canonical_state(&space, irrep, w, 0)?;
                ctx.bound("kappa-eigenstates", &format!("kappa=0;{irrep};{w}"), a.sub(&b)?.norm(), 1e-14);
            }
        }
        Ok(())
    });

    ctx.group("kappa-orthonormality", |ctx| {
        let space = build_space(6, ctx.cutoff(OVERLAP_CUTOFF))?;
        for kappa in [c(0.5, 0.0), c(0.3, 0.4)] {
            let mut states = Vec::new();
            for irrep in irreps_up_to(p_max) {
                for w in irrep.weights() {
                    states.push((format!("{irrep};{w}"), kappa_state(&space, irrep, w, kappa, TOWER_TAIL)?));
                }
            }
            let (mut diag, mut off) = (0.0f64, 0.0f64);
            for (i, (_, a)) in states.iter().enumerate() {
                diag = diag.max((a.state.norm_sqr() - (1.0 - a.tail)).abs());
                for (_, b) in &states[i + 1..] {
                    off = off.max(inner(&a.state, &b.state)?.norm());
                }
            }
            ctx.bound("kappa-orthonormality", &format!("kappa={kappa};max|<e|e> - (1 - tail)|"), diag, 1e-12);
            ctx.bound("kappa-orthonormality", &format!("kappa={kappa};max|<e|e'>|"), off, 1e-12);
        }
        Ok(())
    });

    ctx.group("kappa-overlap", |ctx| {
        let space = build_space(6, ctx.cutoff(OVERLAP_CUTOFF))?;
        for (u, v, x, y) in OVERLAP_POINTS {
            let report = OrbitReport::class_d(u, v, x, y)?;
            let coh = representative_label(&report).state(&space, STATE_TAIL)?;
            for irrep in irreps_up_to(p_max) {
                for w in irrep.weights() {
                    let e = kappa_state(&space, irrep, w, report.kappa, TOWER_TAIL)?;
                    let brute = inner(&e.state, &coh.state)?;
                    let closed = overlap_kappa(irrep, w, u, v, x, y)?;
                    let id = format!("u={u};v={v};x={x};y={y};{irrep};{w}");
                    ctx.bound("kappa-overlap", &id, (brute - closed).norm(), 1e-6 + e.tail + coh.tail);
                }
            }
        }
        Ok(())
    });

    ctx.group("nprime-limit", |ctx| {
        for p in 0..=5u32 {
            for q in 0..=5u32 {
                let label = IrrepLabel::new(p, q);
                let want = (log_factorial((p + q + 1) as u64) - log_factorial(p as u64) - log_factorial(q as u64)).exp();
                ctx.close("nprime-limit", &format!("{label};closed"), nprime_squared(label, 0.0)?, want, 1e-10);
                ctx.close("nprime-limit", &format!("{label};double-sum"), nprime_squared_double_sum(label, 0.0)?, want, 1e-10);
                ctx.close("nprime-limit", &format!("{label};t=1e-6"), nprime_squared(label, 1e-6)?, want, 1e-8);
            }
        }
        Ok(())
    });

    ctx.group("kappa-reconstruction", |ctx| {
        let space = build_space(6, ctx.cutoff(RECONSTRUCTION_CUTOFF))?;
        let points = [(1.0, 1.0, 0.5, 0.0), (1.0, 1.2, 0.3, 0.4), (1.2, 1.2, 0.2, -0.3), (0.6, 0.9, -0.7, 0.1)];
        for (u, v, x, y) in points {
            let report = OrbitReport::class_d(u, v, x, y)?;
            let table = hw_to_su3_expansion(&report, space.cutoff() as u32, STATE_TAIL)?;
            // fiducial towers of the top irreps keep few rho terms; both sides are still the
            // projection onto grades <= cutoff, so only the state and table tails enter
            let rec = reconstruct_su3(&space, &report, &table, 1.0)?;
            let coh = representative_label(&report).state(&space, STATE_TAIL)?;
            let inf = infidelity_of(&rec.state, &coh.state)?;
            let slack = 1e-5 + table.tail + coh.tail;
            ctx.bound("kappa-reconstruction", &format!("u={u};v={v};x={x};y={y}"), inf, slack);
            ctx.close("kappa-reconstruction", &format!("u={u};v={v};x={x};y={y};weight+tail"), table.weight() + table.tail, 1.0, 1e-12);
        }
        Ok(())
    });

    ctx.group("frame-kappa-quadrature", |ctx| {
        let f = planar_bump();
        let h0 = coeffs_su3_h0(&f, p_max)?;
        let k0 = coeffs_su3_kappa(&f, c(0.0, 0.0), p_max)?;
        for irrep in irreps_up_to(p_max) {
            let (a, b) = (coefficient_of(&h0, irrep), coefficient_of(&k0, irrep));
            ctx.close("frame-kappa-quadrature", &format!("kappa=0;{irrep}"), b, a, 1e-9 * a.abs());
        }
        for kappa in [0.3, 0.8] {
            let dec = coeffs_su3_kappa(&f, c(kappa, 0.0), p_max)?;
            for irrep in irreps_up_to(p_max) {
                let got = coefficient_of(&dec, irrep);
                ctx.holds("frame-kappa-quadrature", &format!("kappa={kappa};{irrep};positive"), got > 0.0, "coefficient not positive");
                let want = bump_kappa_simpson(irrep, kappa)?;
                ctx.close("frame-kappa-quadrature", &format!("kappa={kappa};{irrep};simpson"), got, want, 1e-7 * want.abs());
            }
            // the coefficient depends on |kappa| only
            let rotated = coeffs_su3_kappa(&f, C64::from_polar(kappa, 2.0), p_max)?;
            for irrep in irreps_up_to(p_max) {
                let (a, b) = (coefficient_of(&dec, irrep), coefficient_of(&rotated, irrep));
                ctx.close("frame-kappa-quadrature", &format!("kappa={kappa};{irrep};phase"), b, a, 1e-12 * a.abs());
            }
        }
        Ok(())
    });

    ctx.group("frame-kappa-shell", |ctx| {
        let cutoff = ctx.cutoff(OVERLAP_CUTOFF);
        for (u0, v0, kappa) in [(1.0, 1.0, c(0.5, 0.0)), (1.2, 0.9, c(0.3, 0.4))] {
            for chk in mc_su3_kappa_shell(u0, v0, kappa, p_max, cutoff, samples, ctx.seed("frame-kappa-shell"))? {
                let detail = format!("u0={u0};v0={v0};kappa={kappa};{};{}", chk.sector, chk.component.as_deref().unwrap_or(""));
                ctx.mc("frame-kappa-shell", &detail, &chk.estimate, chk.closed_form, chk.slack);
            }
        }
        Ok(())
    });

    ctx.group("frame-kappa-limit", |ctx| {
        let weights = [("shell", WeightFunction::ProductShell { u0: 1.0, v0: 1.0 }), ("bump", planar_bump())];
        for (name, f) in &weights {
            let h0 = coeffs_su3_h0(f, p_max)?;
            let decs = LIMIT_KAPPAS
                .iter()
                .map(|&k| coeffs_su3_kappa(f, c(k, 0.0), p_max))
                .collect::<schwinger::Result<Vec<_>>>()?;
            for irrep in irreps_up_to(p_max) {
                let base = coefficient_of(&h0, irrep);
                let diffs: Vec<f64> = decs.iter().map(|d| (coefficient_of(d, irrep) - base).abs()).collect();
                for (k, d) in LIMIT_KAPPAS.iter().zip(&diffs) {
                    ctx.bound("frame-kappa-limit", &format!("{name};{irrep};kappa={k};|C-C0|/C0"), d / base, 2.0 * k * k);
                }
                for i in 0..diffs.len() - 1 {
                    let order = (diffs[i] / diffs[i + 1]).log10() / (LIMIT_KAPPAS[i] / LIMIT_KAPPAS[i + 1]).log10();
                    let id = format!("{name};{irrep};order {}->{}", LIMIT_KAPPAS[i], LIMIT_KAPPAS[i + 1]);
                    ctx.close("frame-kappa-limit", &id, order, 2.0, 0.05);
                }
            }
        }
        Ok(())
    });
}
