use num_complex::Complex64 as C64;
use rand::Rng;
use schwinger::coherent::{
    classify_orbit, representative_label, CoherentLabel, OrbitClass, OrbitReport, ORBIT_TOLERANCE,
};
use schwinger::fock::{build_space, Occupation};
use schwinger::groups::{haar_sample_chart, haar_sample_su3, su3_from_chart, uniform_complex_sphere, SectorLayout, Su3Element};
use schwinger::mc::{chunk_rng, estimate};
use schwinger::resolutions::{jacobian_identity, klauder_mc_check, KlauderRoute};
use std::f64::consts::PI;
use std::sync::Arc;

use crate::record::Ctx;

const DEFAULT_CUTOFF: usize = 8;
const RANDOM_LABELS: usize = 10_000;
const ROTATIONS: usize = 10;
const INVARIANT_TOLERANCE: f64 = 1e-12;
const CLASSES: [OrbitClass; 5] = [OrbitClass::A, OrbitClass::B, OrbitClass::C, OrbitClass::D, OrbitClass::E];

const ZERO: C64 = C64::new(0.0, 0.0);

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn scaled(r: f64, v: Vec<C64>) -> [C64; 3] {
    [v[0] * r, v[1] * r, v[2] * r]
}

/// Random label of the requested class, radii in (0, 2].
fn random_label<R: Rng>(rng: &mut R, class: OrbitClass) -> CoherentLabel {
    let u = 2.0 * (1.0 - rng.random::<f64>());
    let v = 2.0 * (1.0 - rng.random::<f64>());
    let z = scaled(u, uniform_complex_sphere(rng, 3));
    match class {
        OrbitClass::A => CoherentLabel::new([ZERO; 3], [ZERO; 3]),
        OrbitClass::B => CoherentLabel::new(z, [ZERO; 3]),
        OrbitClass::C => CoherentLabel::new([ZERO; 3], scaled(v, uniform_complex_sphere(rng, 3))),
        OrbitClass::D => CoherentLabel::new(z, scaled(v, uniform_complex_sphere(rng, 3))),
        OrbitClass::E => {
            // w ∝ conj(z) saturates |zᵀw| = |z||w|
            let ph = C64::from_polar(v / u, 2.0 * PI * rng.random::<f64>());
            CoherentLabel::new(z, [z[0].conj() * ph, z[1].conj() * ph, z[2].conj() * ph])
        }
    }
}

fn invariant_deviation(a: &OrbitReport, b: &OrbitReport) -> f64 {
    let s = 1.0f64.max(a.u.max(a.v)).powi(2);
    ((a.u - b.u).abs().max((a.v - b.v).abs()) / s.sqrt()).max((a.kappa - b.kappa).norm() / s)
}

pub fn run(ctx: &mut Ctx) {
    let samples = ctx.samples();

    ctx.group("classification-examples", |ctx| {
        let e1 = [c(1.0, 0.0), ZERO, ZERO];
        let e2 = [ZERO, c(1.0, 0.0), ZERO];
        let examples = [
            ("a", CoherentLabel::new([ZERO; 3], [ZERO; 3]), OrbitClass::A, 0.0, 0.0, None),
            ("b", CoherentLabel::new(e1, [ZERO; 3]), OrbitClass::B, 1.0, 0.0, None),
            ("c", CoherentLabel::new([ZERO; 3], e2), OrbitClass::C, 0.0, 1.0, None),
            ("d", CoherentLabel::new(e1, e2), OrbitClass::D, 1.0, 1.0, Some((0.0, 0.0))),
            (
                "e",
                CoherentLabel::new([ZERO, ZERO, c(1.0, 0.0)], [ZERO, ZERO, c(0.0, 1.0)]),
                OrbitClass::E,
                1.0,
                1.0,
                Some((0.0, 1.0)),
            ),
        ];
        for (name, label, class, u, v, xy) in examples {
            let r = classify_orbit(&label, ORBIT_TOLERANCE);
            ctx.holds("classification-examples", &format!("{name};class"), r.class == class, &format!("classified as {}", r.class));
            ctx.close("classification-examples", &format!("{name};u"), r.u, u, 1e-15);
            ctx.close("classification-examples", &format!("{name};v"), r.v, v, 1e-15);
            if let Some((x, y)) = xy {
                let (gx, gy) = r.xy.unwrap_or((f64::NAN, f64::NAN));
                ctx.close("classification-examples", &format!("{name};x"), gx, x, 1e-15);
                ctx.close("classification-examples", &format!("{name};y"), gy, y, 1e-15);
            }
        }
        Ok(())
    });

    ctx.group("orbit-invariance", |ctx| {
        let mut rng = chunk_rng(ctx.seed("orbit-invariance"), 0);
        let mut worst = [0.0f64; 5];
        let mut flips = [0usize; 5];
        let mut counts = [0usize; 5];
        for i in 0..RANDOM_LABELS {
            let k = i % CLASSES.len();
            let label = random_label(&mut rng, CLASSES[k]);
            let base = classify_orbit(&label, ORBIT_TOLERANCE);
            if base.class != CLASSES[k] {
                flips[k] += 1;
            }
            for _ in 0..ROTATIONS {
                let a = haar_sample_su3(&mut rng);
                let moved = classify_orbit(&label.transformed(&a), ORBIT_TOLERANCE);
                counts[k] += 1;
                if moved.class != base.class {
                    flips[k] += 1;
                }
                worst[k] = worst[k].max(invariant_deviation(&base, &moved));
            }
        }
        for (k, class) in CLASSES.iter().enumerate() {
            let note = format!("{} of {} rotated labels changed class", flips[k], counts[k]);
            ctx.holds("orbit-invariance", &format!("class={class};class"), flips[k] == 0, &note);
            ctx.bound("orbit-invariance", &format!("class={class};max invariant deviation"), worst[k], INVARIANT_TOLERANCE);
        }
        Ok(())
    });

    ctx.group("representative-roundtrip", |ctx| {
        let mut reports = vec![
            ("b", OrbitReport { class: OrbitClass::B, u: 1.3, v: 0.0, xy: None, kappa: ZERO }),
            ("c", OrbitReport { class: OrbitClass::C, u: 0.0, v: 0.7, xy: None, kappa: ZERO }),
        ];
        for (x, y) in [(0.0, 0.0), (0.3, -0.4), (-0.9, 0.1), (0.0, 0.999)] {
            reports.push(("d", OrbitReport::class_d(1.1, 0.6, x, y)?));
        }
        for alpha in [0.0, 1.0, -2.5] {
            reports.push(("e", OrbitReport::class_e(0.8, 1.4, alpha)?));
        }
        for (i, (name, r)) in reports.iter().enumerate() {
            let back = classify_orbit(&representative_label(r), ORBIT_TOLERANCE);
            ctx.holds("representative-roundtrip", &format!("{i};{name};class"), back.class == r.class, &format!("classified as {}", back.class));
            ctx.bound("representative-roundtrip", &format!("{i};{name};invariants"), invariant_deviation(r, &back), 1e-14);
        }
        let mut rng = chunk_rng(ctx.seed("representative-roundtrip"), 0);
        for (k, class) in CLASSES.iter().enumerate().skip(1) {
            let mut worst = 0.0f64;
            let mut ok = true;
            for _ in 0..100 {
                let r = classify_orbit(&random_label(&mut rng, CLASSES[k]), ORBIT_TOLERANCE);
                let back = classify_orbit(&representative_label(&r), ORBIT_TOLERANCE);
                ok &= back.class == r.class;
                worst = worst.max(invariant_deviation(&r, &back));
            }
            ctx.holds("representative-roundtrip", &format!("random;class={class};class"), ok, "representative changed class");
            ctx.bound("representative-roundtrip", &format!("random;class={class};invariants"), worst, INVARIANT_TOLERANCE);
        }
        Ok(())
    });

    ctx.group("chart", |ctx| {
        let mut rng = chunk_rng(ctx.seed("chart"), 0);
        let (mut unit, mut det, mut col) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..1000 {
            let chart = haar_sample_chart(&mut rng);
            let a = su3_from_chart(&chart)?;
            let (u, d) = a.unitarity_defect();
            unit = unit.max(u);
            det = det.max(d);
            col = col.max((a.matrix().column(0) - chart.eta).camax());
        }
        ctx.bound("chart", "max|A^dag A - 1|", unit, 1e-13);
        ctx.bound("chart", "max|det A - 1|", det, 1e-13);
        ctx.bound("chart", "max|A e1 - eta|", col, 1e-15);
        Ok(())
    });

    ctx.group("haar-moments", |ctx| {
        // per entry: Re A_ij, Im A_ij, |A_ij|², then Re/Im A_11 conj(A_22), then |Tr A|²
        let dim = 9 * 3 + 2 + 1;
        let moments = |a: &Su3Element, out: &mut [f64]| {
            let m = a.matrix();
            for k in 0..9 {
                let x = m[(k / 3, k % 3)];
                out[3 * k] = x.re;
                out[3 * k + 1] = x.im;
                out[3 * k + 2] = x.norm_sqr();
            }
            let cross = m[(0, 0)] * m[(1, 1)].conj();
            out[27] = cross.re;
            out[28] = cross.im;
            out[29] = m.trace().norm_sqr();
        };
        let direct = estimate(ctx.seed("haar-moments"), samples, dim, |rng, out| moments(&haar_sample_su3(rng), out));
        let via_chart = estimate(ctx.seed("haar-moments") ^ 1, samples, dim, |rng, out| {
            let chart = haar_sample_chart(rng);
            moments(&su3_from_chart(&chart).expect("regular chart"), out)
        });
        for (route, est) in [("sampler", &direct), ("chart", &via_chart)] {
            for k in 0..9 {
                let (i, j) = (k / 3 + 1, k % 3 + 1);
                ctx.mc("haar-moments", &format!("{route};E[Re A{i}{j}]"), &est[3 * k], 0.0, 0.0);
                ctx.mc("haar-moments", &format!("{route};E[Im A{i}{j}]"), &est[3 * k + 1], 0.0, 0.0);
                ctx.mc("haar-moments", &format!("{route};E|A{i}{j}|^2"), &est[3 * k + 2], 1.0 / 3.0, 0.0);
            }
            ctx.mc("haar-moments", &format!("{route};E[Re A11 conj A22]"), &est[27], 0.0, 0.0);
            ctx.mc("haar-moments", &format!("{route};E[Im A11 conj A22]"), &est[28], 0.0, 0.0);
            ctx.mc("haar-moments", &format!("{route};E|Tr A|^2"), &est[29], 1.0, 0.0);
        }
        Ok(())
    });

    ctx.group("group-action", |ctx| {
        let space = build_space(6, ctx.cutoff(DEFAULT_CUTOFF))?;
        let layout = Arc::new(SectorLayout::new(&space)?);
        let mut rng = chunk_rng(ctx.seed("group-action"), 0);
        for i in 0..5 {
            let label = random_label(&mut rng, OrbitClass::D);
            let a = haar_sample_su3(&mut rng);
            let moved = layout.rep(&a).apply(&label.state(&space, 1.0)?.state)?;
            let direct = label.transformed(&a).state(&space, 1.0)?.state;
            ctx.bound("group-action", &format!("label {i};|U(A)|z,w> - |Az,A*w>|"), moved.sub(&direct)?.norm(), 1e-12);
        }
        let a = haar_sample_su3(&mut rng);
        let b = haar_sample_su3(&mut rng);
        let label = random_label(&mut rng, OrbitClass::D);
        let psi = label.state(&space, 1.0)?.state;
        let ab = layout.rep(&a.mul(&b)).apply(&psi)?;
        let a_b = layout.rep(&a).apply(&layout.rep(&b).apply(&psi)?)?;
        ctx.bound("group-action", "homomorphism;|U(AB) - U(A)U(B)|", ab.sub(&a_b)?.norm(), 1e-12);
        let id = layout.rep(&Su3Element::identity()).apply(&psi)?;
        ctx.bound("group-action", "identity", id.sub(&psi)?.norm(), 1e-14);
        Ok(())
    });

    ctx.group("jacobian", |ctx| {
        let j = jacobian_identity()?;
        ctx.close("jacobian", "u-moment", j.u_moment, 1.0, 1e-12);
        ctx.close("jacobian", "disk", j.disk, PI / 2.0, 1e-12);
        ctx.close("jacobian", "value", j.value, 1.0, 1e-10);
        Ok(())
    });

    ctx.group("klauder-chart", |ctx| {
        let o = |c: [u16; 6]| Occupation::new(&c);
        let pairs = [
            (o([0; 6]), o([0; 6])),
            (o([1, 0, 0, 0, 0, 0]), o([1, 0, 0, 0, 0, 0])),
            (o([0, 0, 1, 0, 1, 0]), o([0, 0, 1, 0, 1, 0])),
            (o([1, 0, 0, 1, 0, 0]), o([1, 0, 0, 1, 0, 0])),
            (o([1, 0, 0, 0, 0, 0]), o([0, 1, 0, 0, 0, 0])),
            (o([0; 6]), o([1, 0, 0, 1, 0, 0])),
            (o([1, 0, 0, 1, 0, 0]), o([0, 1, 0, 0, 1, 0])),
        ];
        for route in [KlauderRoute::Gaussian, KlauderRoute::OrbitChart] {
            let name = match route {
                KlauderRoute::Gaussian => "gaussian",
                KlauderRoute::OrbitChart => "chart",
            };
            for c in klauder_mc_check(6, &pairs, route, samples, ctx.seed("klauder-chart"))? {
                ctx.mc("klauder-chart", &format!("{name};<{}|.|{}>;re", c.row, c.col), &c.re, c.expected, 0.0);
                ctx.mc("klauder-chart", &format!("{name};<{}|.|{}>;im", c.row, c.col), &c.im, 0.0, 0.0);
            }
        }
        Ok(())
    });
}
