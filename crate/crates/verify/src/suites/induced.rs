use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use schwinger::algebra::{apply_k_minus, apply_k_plus, sp2r_generators, su3_generators};
use schwinger::basis::{
    canonical_state, grade_completeness, grade_labels, highest_weight_state, induced_wavefunction,
    induced_wavefunction_unchecked, irreps_up_to, IrrepLabel,
};
use schwinger::fock::{build_space, inner, LinearOperator, StateVector};
use schwinger::groups::{haar_sample_su3, uniform_complex_sphere, SectorLayout};
use schwinger::mc::{chunk_rng, estimate};
use schwinger::specfun::{binomial_exact, factorial};
use schwinger::Error;

use crate::record::Ctx;

const BASIS_CUTOFF: usize = 10;
const BASIS_P_PLUS_Q: u32 = 4;
const NULL_CUTOFF: usize = 6;
const WAVE_CUTOFF: usize = 6;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// |(X − λ)ψ|.
fn eigen_residual(x: &LinearOperator, psi: &StateVector, lambda: f64) -> schwinger::Result<f64> {
    let mut r = x.apply(psi)?;
    r.axpy(c(-lambda, 0.0), psi)?;
    Ok(r.norm())
}

fn unit_xi(v: Vec<C64>) -> [C64; 3] {
    [v[0], v[1], v[2]]
}

/// Normalized superposition of the given states.
fn mix(states: &[&StateVector], coeffs: &[C64]) -> schwinger::Result<StateVector> {
    let mut out = StateVector::zeros(states[0].space());
    for (s, &a) in states.iter().zip(coeffs) {
        out.axpy(a, s)?;
    }
    Ok(out.normalized())
}

pub fn run(ctx: &mut Ctx) {
    let samples = ctx.samples();

    ctx.group("dimensions", |ctx| {
        for p in 0..=8u32 {
            for q in 0..=8u32 {
                let l = IrrepLabel::new(p, q);
                let d = ((p + 1) * (q + 1) * (p + q + 2) / 2) as i128;
                ctx.exact("dimensions", &format!("{l};d"), l.dimension() as i128, d);
                ctx.exact("dimensions", &format!("{l};weights"), l.weights().len() as i128, d);
                ctx.exact("dimensions", &format!("{l};2k"), l.k2() as i128, (p + q + 3) as i128);
            }
        }
        let space = build_space(6, 12)?;
        for n in 0..=12usize {
            let labels = grade_labels(n as u32).len() as i128;
            ctx.exact("dimensions", &format!("grade {n};labels"), labels, binomial_exact(n as u64 + 5, 5));
            ctx.exact("dimensions", &format!("grade {n};fock"), space.grade_range(n).len() as i128, labels);
        }
        Ok(())
    });

    ctx.group("highest-weight", |ctx| {
        let space = build_space(6, 6)?;
        let su3 = su3_generators(&space)?;
        let i2 = su3.isospin_squared()?;
        let y = su3.hypercharge();
        let cas = su3.casimir()?;
        for l in irreps_up_to(6) {
            let psi = highest_weight_state(&space, l)?;
            let w = l.highest_weight();
            let (p, q) = (l.p as f64, l.q as f64);
            ctx.close("highest-weight", &format!("{l};norm"), psi.norm(), 1.0, 1e-14);
            // a1 and b2 both carry I3 = 1/2, with Y = 1/3 and -1/3
            let iso = (p + q) / 2.0;
            ctx.bound("highest-weight", &format!("{l};|(I^2 - I(I+1)) psi|"), eigen_residual(&i2, &psi, iso * (iso + 1.0))?, 1e-12);
            ctx.bound("highest-weight", &format!("{l};|(I3 - (p+q)/2) psi|"), eigen_residual(&su3.q[2], &psi, iso)?, 1e-12);
            ctx.bound("highest-weight", &format!("{l};|(Y - (p-q)/3) psi|"), eigen_residual(&y, &psi, (p - q) / 3.0)?, 1e-12);
            let casimir = (p * p + q * q + p * q + 3.0 * p + 3.0 * q) / 3.0;
            ctx.bound("highest-weight", &format!("{l};|(C2 - c(p,q)) psi|"), eigen_residual(&cas, &psi, casimir)?, 1e-11);
            ctx.bound("highest-weight", &format!("{l};|K- psi|"), apply_k_minus(&psi)?.norm(), 1e-12);
            let canon = canonical_state(&space, l, w, 0)?;
            ctx.bound("highest-weight", &format!("{l};|psi - canonical|"), psi.sub(&canon)?.norm(), 1e-13);
        }
        Ok(())
    });

    ctx.group("canonical-basis", |ctx| {
        let space = build_space(6, ctx.cutoff(BASIS_CUTOFF))?;
        let su3 = su3_generators(&space)?;
        let sp = sp2r_generators(&space)?;
        let i2 = su3.isospin_squared()?;
        let y = su3.hypercharge();
        // states of different (grade, M, Y) have disjoint support
        let mut blocks: BTreeMap<(usize, i32, i32), Vec<StateVector>> = BTreeMap::new();
        for l in irreps_up_to(BASIS_P_PLUS_Q) {
            let weights = l.weights();
            ctx.exact("canonical-basis", &format!("{l};count"), weights.len() as i128, l.dimension() as i128);
            for rho in 0..=((space.cutoff() - l.grade(0)) / 2) as u32 {
                for &w in &weights {
                    let psi = canonical_state(&space, l, w, rho)?;
                    let id = format!("{l};{w};rho={rho}");
                    let iso = w.isospin();
                    ctx.bound("canonical-basis", &format!("{id};I^2"), eigen_residual(&i2, &psi, iso * (iso + 1.0))?, 1e-11);
                    ctx.bound("canonical-basis", &format!("{id};I3"), eigen_residual(&su3.q[2], &psi, w.m())?, 1e-12);
                    ctx.bound("canonical-basis", &format!("{id};Y"), eigen_residual(&y, &psi, w.y())?, 1e-12);
                    ctx.bound("canonical-basis", &format!("{id};J0"), eigen_residual(&sp.j0, &psi, l.k() + rho as f64)?, 1e-12);
                    blocks.entry((l.grade(rho), w.m2, w.y3)).or_default().push(psi);
                }
            }
        }
        let mut worst: BTreeMap<usize, f64> = BTreeMap::new();
        for ((grade, _, _), states) in &blocks {
            for (a, x) in states.iter().enumerate() {
                for (b, z) in states.iter().enumerate().skip(a) {
                    let want = if a == b { 1.0 } else { 0.0 };
                    let dev = (inner(x, z)? - want).norm();
                    let e = worst.entry(*grade).or_insert(0.0);
                    *e = e.max(dev);
                }
            }
        }
        for (grade, dev) in worst {
            ctx.bound("canonical-basis", &format!("grade {grade};max gram deviation"), dev, 1e-10);
        }
        Ok(())
    });

    ctx.group("k-plus-ladder", |ctx| {
        let space = build_space(6, ctx.cutoff(BASIS_CUTOFF))?;
        for l in irreps_up_to(3) {
            let mut ends = vec![l.highest_weight(), l.weights()[0]];
            ends.dedup();
            for w in ends {
                let mut rho = 0u32;
                while l.grade(rho + 1) <= space.cutoff() {
                    let lower = canonical_state(&space, l, w, rho)?;
                    let raised = apply_k_plus(&lower)?;
                    let m = l.k() + rho as f64;
                    let id = format!("{l};{w};rho={rho}");
                    ctx.close("k-plus-ladder", &format!("{id};|K+ psi|^2"), raised.norm_sqr(), (m + l.k()) * (m - l.k() + 1.0), 1e-10);
                    let upper = canonical_state(&space, l, w, rho + 1)?;
                    ctx.bound("k-plus-ladder", &format!("{id};|normalized K+ psi - next|"), raised.normalized().sub(&upper)?.norm(), 1e-12);
                    rho += 1;
                }
            }
        }
        Ok(())
    });

    ctx.group("grade-completeness", |ctx| {
        let space = build_space(6, ctx.cutoff(BASIS_CUTOFF))?;
        for grade in 0..=space.cutoff() {
            let r = grade_completeness(&space, grade)?;
            ctx.exact("grade-completeness", &format!("grade {grade};count"), r.count as i128, r.sector_dim as i128);
            ctx.bound("grade-completeness", &format!("grade {grade};max gram deviation"), r.max_gram_deviation, 1e-10);
        }
        Ok(())
    });

    ctx.group("null-space", |ctx| {
        let space = build_space(6, NULL_CUTOFF)?;
        let sp = sp2r_generators(&space)?;
        for n in 0..=NULL_CUTOFF {
            // K- maps grade n to grade n-2; the block rank is the rank of the union
            let mut idx: Vec<usize> = space.grade_range(n).collect();
            if n >= 2 {
                idx.extend(space.grade_range(n - 2));
            }
            let rank = sp.k_minus.restrict(&idx).rank(1e-9);
            let nullity = space.grade_range(n).len() - rank;
            let want: u64 = (0..=n as u32).map(|p| IrrepLabel::new(p, n as u32 - p).dimension()).sum();
            ctx.exact("null-space", &format!("grade {n};dim ker K-"), nullity as i128, want as i128);
        }
        let xi = [c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
        for l in irreps_up_to(2) {
            let w = l.highest_weight();
            let ground = canonical_state(&space, l, w, 0)?;
            ctx.holds("null-space", &format!("{l};rho=0 accepted"), induced_wavefunction(&ground, &xi).is_ok(), "rejected");
            let excited = canonical_state(&space, l, w, 1)?;
            let rejected = matches!(induced_wavefunction(&excited, &xi), Err(Error::NotInNullSpace(_)));
            ctx.holds("null-space", &format!("{l};rho=1 rejected"), rejected, "accepted");
        }
        Ok(())
    });

    ctx.group("induced-values", |ctx| {
        let space = build_space(6, WAVE_CUTOFF)?;
        let mut rng = chunk_rng(ctx.seed("induced-values"), 0);
        let vac = StateVector::vacuum(&space);
        for i in 0..5 {
            let xi = unit_xi(uniform_complex_sphere(&mut rng, 3));
            let v = induced_wavefunction(&vac, &xi)?;
            ctx.bound("induced-values", &format!("xi {i};vacuum"), (v - c(2f64.sqrt(), 0.0)).norm(), 1e-14);
            for l in irreps_up_to(4) {
                let h = highest_weight_state(&space, l)?;
                let (p, q) = (l.p as u64, l.q as u64);
                let scale = (factorial(p + q + 2) / (factorial(p) * factorial(q))).sqrt();
                let want = scale * xi[0].powu(l.p) * xi[1].conj().powu(l.q);
                let got = induced_wavefunction(&h, &xi)?;
                ctx.bound("induced-values", &format!("xi {i};{l}"), (got - want).norm(), 1e-12 * scale);
            }
        }
        Ok(())
    });

    ctx.group("induced-norm", |ctx| {
        let space = build_space(6, WAVE_CUTOFF)?;
        let l11 = IrrepLabel::new(1, 1);
        let w = l11.weights();
        let states = vec![
            ("vacuum".to_string(), StateVector::vacuum(&space)),
            ("(1,0) hw".to_string(), highest_weight_state(&space, IrrepLabel::new(1, 0))?),
            (format!("(1,1) {}", w[3]), canonical_state(&space, l11, w[3], 0)?),
            (format!("(1,1) {}", w[4]), canonical_state(&space, l11, w[4], 0)?),
            ("(1,1) hw".to_string(), highest_weight_state(&space, l11)?),
            ("(2,1) hw".to_string(), highest_weight_state(&space, IrrepLabel::new(2, 1))?),
        ];
        let mixed = mix(
            &[&states[0].1, &states[2].1, &states[4].1, &states[5].1],
            &[c(0.5, 0.0), c(0.3, -0.4), c(-0.2, 0.1), c(0.0, 0.6)],
        )?;
        let mut all = states;
        all.push(("mixture".to_string(), mixed));
        for (name, s) in &all {
            induced_wavefunction(s, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
                .map_err(|e| Error::Domain(format!("{name}: {e}")))?;
        }
        let pairs: Vec<(usize, usize)> = (0..all.len()).flat_map(|a| (a..all.len()).map(move |b| (a, b))).collect();
        let est = estimate(ctx.seed("induced-norm"), samples, 2 * pairs.len(), |rng, out| {
            let xi = unit_xi(uniform_complex_sphere(rng, 3));
            let vals: Vec<C64> = all.iter().map(|(_, s)| induced_wavefunction_unchecked(s, &xi)).collect();
            for (k, &(a, b)) in pairs.iter().enumerate() {
                let g = 0.5 * vals[a].conj() * vals[b];
                out[2 * k] = g.re;
                out[2 * k + 1] = g.im;
            }
        });
        for (k, &(a, b)) in pairs.iter().enumerate() {
            let want = inner(&all[a].1, &all[b].1)?;
            let id = format!("<{}|{}>", all[a].0, all[b].0);
            ctx.mc("induced-norm", &format!("{id};re"), &est[2 * k], want.re, 1e-12);
            ctx.mc("induced-norm", &format!("{id};im"), &est[2 * k + 1], want.im, 1e-12);
        }
        Ok(())
    });

    ctx.group("induced-equivariance", |ctx| {
        let space = build_space(6, WAVE_CUTOFF)?;
        let layout = Arc::new(SectorLayout::new(&space)?);
        let mut rng = chunk_rng(ctx.seed("induced-equivariance"), 0);
        let l21 = IrrepLabel::new(2, 1);
        let w = l21.weights();
        let parts = [
            StateVector::vacuum(&space),
            canonical_state(&space, IrrepLabel::new(0, 2), IrrepLabel::new(0, 2).weights()[2], 0)?,
            canonical_state(&space, l21, w[5], 0)?,
            highest_weight_state(&space, IrrepLabel::new(1, 1))?,
        ];
        let psi = mix(&parts.iter().collect::<Vec<_>>(), &[c(0.4, 0.1), c(-0.3, 0.5), c(0.6, 0.0), c(0.1, -0.2)])?;
        for i in 0..4 {
            let a = haar_sample_su3(&mut rng);
            let moved = layout.rep(&a.conj()).apply(&psi)?;
            ctx.bound("induced-equivariance", &format!("rotation {i};|K- U psi|"), apply_k_minus(&moved)?.norm(), 1e-12);
            for j in 0..3 {
                let xi = unit_xi(uniform_complex_sphere(&mut rng, 3));
                let lhs = induced_wavefunction(&moved, &xi)?;
                let rhs = induced_wavefunction(&psi, &a.inverse().act(&xi))?;
                ctx.bound("induced-equivariance", &format!("rotation {i};xi {j}"), (lhs - rhs).norm(), 1e-12);
            }
        }
        Ok(())
    });
}
