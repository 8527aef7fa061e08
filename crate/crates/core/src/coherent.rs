//! Coherent-state layer: orbit invariants of (z, w) labels and their
//! representatives, SU(2) spin coherent states, and the closed-form
//! expansions of oscillator coherent states over SU(3) coherent states.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Serialize, Serializer};

use crate::basis::{
    highest_weight_state, kappa_state, su2_scalar_kappa_state, IrrepLabel, WeightLabel,
};
use crate::error::{Error, Result};
use crate::fock::{FockSpace, Occupation, StateVector, Truncated};
use crate::groups::Su3Element;
use crate::specfun::{binomial, hyp0f1, hyp2f1_terminating, jacobi_p, log_factorial};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Default tolerance on u = 0, v = 0 in orbit classification.
pub const ORBIT_TOLERANCE: f64 = 1e-12;
/// x² + y² above 1 − CLASS_E_BOUNDARY is classified as the boundary orbit.
pub const CLASS_E_BOUNDARY: f64 = 1e-9;

/// Oscillator coherent-state label (z, w) ∈ C³ × C³.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoherentLabel {
    pub z: [C64; 3],
    pub w: [C64; 3],
}

impl CoherentLabel {
    pub fn new(z: [C64; 3], w: [C64; 3]) -> CoherentLabel {
        CoherentLabel { z, w }
    }

    /// (z₁,z₂,z₃,w₁,w₂,w₃) in the mode order of the six-oscillator space.
    pub fn modes(&self) -> [C64; 6] {
        [self.z[0], self.z[1], self.z[2], self.w[0], self.w[1], self.w[2]]
    }

    /// (Az, A*w).
    pub fn transformed(&self, a: &Su3Element) -> CoherentLabel {
        CoherentLabel { z: a.act(&self.z), w: a.act_conj(&self.w) }
    }

    /// zᵀw (bilinear, no conjugation).
    pub fn kappa(&self) -> C64 {
        self.z.iter().zip(&self.w).map(|(a, b)| a * b).sum()
    }

    /// Truncated six-mode coherent state |z, w⟩.
    pub fn state(&self, space: &Arc<FockSpace>, tail_tolerance: f64) -> Result<Truncated> {
        crate::fock::coherent_state(space, &self.modes(), tail_tolerance)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitClass {
    A,
    B,
    C,
    D,
    E,
}

impl OrbitClass {
    pub fn letter(&self) -> char {
        match self {
            OrbitClass::A => 'a',
            OrbitClass::B => 'b',
            OrbitClass::C => 'c',
            OrbitClass::D => 'd',
            OrbitClass::E => 'e',
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl Serialize for OrbitClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.letter())
    }
}

/// SU(3)-invariants u = |z|, v = |w|, κ = zᵀw = uv(x+iy) and the orbit class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub class: OrbitClass,
    pub u: f64,
    pub v: f64,
    /// x + iy = κ/(uv), present for classes d and e.
    pub xy: Option<(f64, f64)>,
    pub kappa: C64,
}

impl OrbitReport {
    /// Report for a class-d point.
    pub fn class_d(u: f64, v: f64, x: f64, y: f64) -> Result<OrbitReport> {
        if u <= 0.0 || v <= 0.0 || x * x + y * y >= 1.0 {
            return Err(Error::Domain(format!("class d needs u, v > 0 and x²+y² < 1, got {u}, {v}, {x}, {y}")));
        }
        Ok(OrbitReport { class: OrbitClass::D, u, v, xy: Some((x, y)), kappa: C64::new(x, y) * (u * v) })
    }

    /// Report for a class-e point with x + iy = e^{iα}.
    pub fn class_e(u: f64, v: f64, alpha: f64) -> Result<OrbitReport> {
        if u <= 0.0 || v <= 0.0 {
            return Err(Error::Domain(format!("class e needs u, v > 0, got {u}, {v}")));
        }
        let e = C64::from_polar(1.0, alpha);
        Ok(OrbitReport { class: OrbitClass::E, u, v, xy: Some((e.re, e.im)), kappa: e * (u * v) })
    }

    /// t = |κ|/(uv), zero when undefined.
    pub fn t(&self) -> f64 {
        self.xy.map_or(0.0, |(x, y)| x.hypot(y))
    }

    /// x + iy, zero when undefined.
    pub fn phase(&self) -> C64 {
        self.xy.map_or(ZERO, |(x, y)| C64::new(x, y))
    }
}

pub fn classify_orbit(label: &CoherentLabel, tol: f64) -> OrbitReport {
    classify_orbit_with(label, tol, CLASS_E_BOUNDARY)
}

pub fn classify_orbit_with(label: &CoherentLabel, tol: f64, boundary: f64) -> OrbitReport {
    let norm = |v: &[C64; 3]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let (u, v) = (norm(&label.z), norm(&label.w));
    let kappa = label.kappa();
    let class = if u <= tol && v <= tol {
        OrbitClass::A
    } else if v <= tol {
        OrbitClass::B
    } else if u <= tol {
        OrbitClass::C
    } else if kappa.norm_sqr() / (u * u * v * v) > 1.0 - boundary {
        OrbitClass::E
    } else {
        OrbitClass::D
    };
    let xy = match class {
        OrbitClass::D => {
            let c = kappa / (u * v);
            Some((c.re, c.im))
        }
        OrbitClass::E => {
            let c = kappa / kappa.norm();
            Some((c.re, c.im))
        }
        _ => None,
    };
    OrbitReport { class, u, v, xy, kappa }
}

/// Representative point of the orbit described by `report`.
pub fn representative_label(report: &OrbitReport) -> CoherentLabel {
    let r = |x: f64| C64::new(x, 0.0);
    let (u, v) = (report.u, report.v);
    match report.class {
        OrbitClass::A => CoherentLabel::new([ZERO; 3], [ZERO; 3]),
        OrbitClass::B => CoherentLabel::new([r(u), ZERO, ZERO], [ZERO; 3]),
        OrbitClass::C => CoherentLabel::new([ZERO; 3], [ZERO, r(v), ZERO]),
        OrbitClass::D => {
            let c = report.phase();
            let rest = (1.0 - c.norm_sqr()).max(0.0).sqrt();
            CoherentLabel::new([r(u), ZERO, ZERO], [c * v, r(v * rest), ZERO])
        }
        OrbitClass::E => CoherentLabel::new([ZERO, ZERO, r(u)], [ZERO, ZERO, report.phase() * v]),
    }
}

/// ⟨j,n̂(θ′,φ′)|j,n̂(θ,φ)⟩ = (cos θ′/2 cos θ/2 e^{i(φ′−φ)/2} + sin θ′/2 sin θ/2 e^{i(φ−φ′)/2})^{2j}.
pub fn su2_scs_overlap(j2: u32, theta_p: f64, phi_p: f64, theta: f64, phi: f64) -> C64 {
    let base = C64::from_polar((theta_p / 2.0).cos() * (theta / 2.0).cos(), (phi_p - phi) / 2.0)
        + C64::from_polar((theta_p / 2.0).sin() * (theta / 2.0).sin(), (phi - phi_p) / 2.0);
    base.powu(j2)
}

/// Components of |j,n̂(θ,φ)⟩ on |j,m⟩ = |n₁ = j+m, n₂ = j−m⟩, indexed by n₁ = 0..=2j:
/// √((2j)!/(n₁!n₂!)) e^{−imφ} (cos θ/2)^{n₁} (sin θ/2)^{n₂}.
pub fn su2_scs_components(j2: u32, theta: f64, phi: f64) -> Vec<C64> {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    (0..=j2)
        .map(|n1| {
            let n2 = j2 - n1;
            let m = 0.5 * (n1 as f64 - n2 as f64);
            let mag = binomial(j2 as u64, n1 as u64).sqrt() * c.powi(n1 as i32) * s.powi(n2 as i32);
            C64::from_polar(mag, -m * phi)
        })
        .collect()
}

/// |j,n̂(θ,φ)⟩ as a vector of the two-mode space.
pub fn su2_scs_state(space: &Arc<FockSpace>, j2: u32, theta: f64, phi: f64) -> Result<StateVector> {
    space.require_modes(2)?;
    if j2 as usize > space.cutoff() {
        return Err(Error::CutoffExceeded { needed: j2 as usize, cutoff: space.cutoff() });
    }
    let mut psi = StateVector::zeros(space);
    for (n1, c) in su2_scs_components(j2, theta, phi).into_iter().enumerate() {
        let i = space.index(&Occupation::new(&[n1 as u16, (j2 as usize - n1) as u16])).expect("within cutoff");
        psi.amplitudes_mut()[i] = c;
    }
    Ok(psi)
}

/// Two-mode label z = r e^{iα} (cos θ/2 e^{−iφ/2}, sin θ/2 e^{iφ/2}).
pub fn su2_label(r: f64, alpha: f64, theta: f64, phi: f64) -> [C64; 2] {
    [
        C64::from_polar(r * (theta / 2.0).cos(), alpha - phi / 2.0),
        C64::from_polar(r * (theta / 2.0).sin(), alpha + phi / 2.0),
    ]
}

/// Fiducial family a coefficient refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fiducial {
    HighestWeight,
    KappaFiducial,
    Su2Scalar,
    SpinCoherent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionLabel {
    Irrep(IrrepLabel),
    /// Spin j stored as 2j.
    Spin(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpansionEntry {
    pub label: ExpansionLabel,
    pub coefficient: C64,
    pub fiducial: Fiducial,
}

/// Truncated expansion with the squared norm of the omitted terms.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionTable {
    pub entries: Vec<ExpansionEntry>,
    pub tail: f64,
}

impl ExpansionTable {
    pub fn weight(&self) -> f64 {
        self.entries.iter().map(|e| e.coefficient.norm_sqr()).sum()
    }

    pub fn coefficient(&self, label: ExpansionLabel) -> Option<C64> {
        self.entries.iter().find(|e| e.label == label).map(|e| e.coefficient)
    }
}

/// Sums terms t(n) for n > n_max until they become negligible.
fn series_tail(n_max: u32, mut term: impl FnMut(u32) -> f64) -> Result<f64> {
    let mut tail = 0.0;
    let mut last_peak = 0.0f64;
    for n in n_max + 1..n_max + 100_000 {
        let t = term(n);
        tail += t;
        last_peak = last_peak.max(t);
        if t <= 1e-18 * tail.max(1e-300) && t < last_peak || (t == 0.0 && n > n_max + 50) {
            return Ok(tail);
        }
    }
    Err(Error::NonConvergence { what: "expansion tail", iterations: 100_000 })
}

/// |z⟩ = e^{−r²/2} Σ_j (r e^{iα})^{2j}/√((2j)!) |j,n̂(θ,φ)⟩, for 2j ≤ j2_max.
pub fn hw_to_su2_expansion(r: f64, alpha: f64, j2_max: u32) -> Result<ExpansionTable> {
    if r < 0.0 {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    let entries = (0..=j2_max)
        .map(|j2| {
            let ln_mag = -0.5 * r * r + j2 as f64 * r.ln() - 0.5 * log_factorial(j2 as u64);
            let mag = if j2 == 0 { (-0.5 * r * r).exp() } else { ln_mag.exp() };
            ExpansionEntry {
                label: ExpansionLabel::Spin(j2),
                coefficient: C64::from_polar(mag, j2 as f64 * alpha),
                fiducial: Fiducial::SpinCoherent,
            }
        })
        .collect();
    let tail = if r == 0.0 {
        0.0
    } else {
        series_tail(j2_max, |n| (-r * r + 2.0 * n as f64 * r.ln() - log_factorial(n as u64)).exp())?
    };
    Ok(ExpansionTable { entries, tail })
}

/// Σ_j c_j |j,n̂(θ,φ)⟩ on a two-mode space.
pub fn reconstruct_su2(space: &Arc<FockSpace>, table: &ExpansionTable, theta: f64, phi: f64) -> Result<StateVector> {
    let mut out = StateVector::zeros(space);
    for e in &table.entries {
        if let ExpansionLabel::Spin(j2) = e.label {
            if j2 as usize <= space.cutoff() {
                out.axpy(e.coefficient, &su2_scs_state(space, j2, theta, phi)?)?;
            }
        }
    }
    Ok(out)
}

/// I₀ = ½(p+q), M₀ = ½(p−q), doubled.
fn i0_m0(label: IrrepLabel) -> (i32, i32) {
    ((label.p + label.q) as i32, label.p as i32 - label.q as i32)
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = |kappa|/uv must lie in [0,1], got {t}")));
    }
    Ok(())
}

/// N′(p,q;t)² = (a+1)(b+1) ₂F₁(−a,−b;2;1−t²), a = I₀−|M₀|, b = I₀+|M₀|.
pub fn nprime_squared(label: IrrepLabel, t: f64) -> Result<f64> {
    check_t(t)?;
    let (a, b) = (label.p.min(label.q), label.p.max(label.q));
    Ok((a + 1) as f64 * (b + 1) as f64 * hyp2f1_terminating(a, b, 2.0, 1.0 - t * t))
}

pub fn nprime(label: IrrepLabel, t: f64) -> Result<f64> {
    Ok(nprime_squared(label, t)?.sqrt())
}

/// One term of the N′² double sum with doubled (2I, 2M).
fn nprime_term(label: IrrepLabel, i2: i32, m2: i32, t: f64) -> f64 {
    let (i02, m02) = i0_m0(label);
    let lf = |n2: i32| log_factorial((n2 / 2) as u64);
    let ln = ((i2 + 1) as f64).ln() + lf(i2 - m02) + lf(i2 + m2) - lf(i2 + m02) - lf(i2 - m2) - 2.0 * lf(m2 - m02);
    let pt = (i02 - m2) / 2;
    let pw = (m2 - m02) / 2;
    ln.exp() * t.powi(2 * pt) * (1.0 - t * t).powi(pw)
}

/// N′² by the double sum over I = |M₀|..I₀, M = M₀..I.
pub fn nprime_squared_double_sum(label: IrrepLabel, t: f64) -> Result<f64> {
    check_t(t)?;
    let (i02, m02) = i0_m0(label);
    let mut sum = 0.0;
    for i2 in (m02.abs()..=i02).step_by(2) {
        for m2 in (m02..=i2).step_by(2) {
            sum += nprime_term(label, i2, m2, t);
        }
    }
    Ok(sum)
}

/// N′² = Σ_I (2I+1) t^{2(I₀−M₀)} P^{(0,2M₀)}_{I−M₀}(2/t² − 1), for 0 < t ≤ 1.
pub fn nprime_squared_jacobi(label: IrrepLabel, t: f64) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 {
        return Err(Error::Domain("the Jacobi form needs t > 0".into()));
    }
    let (i02, m02) = i0_m0(label);
    let x = 2.0 / (t * t) - 1.0;
    let scale = t.powi(i02 - m02);
    let mut sum = 0.0;
    for i2 in (m02.abs()..=i02).step_by(2) {
        sum += (i2 + 1) as f64 * jacobi_p(((i2 - m02) / 2) as u32, 0.0, m02 as f64, x);
    }
    Ok(scale * sum)
}

/// κ⟨p,q;I,M,Y|z⁽⁰⁾(u), w⁽⁰⁾(v,x,y)⟩ in closed form; zero unless Y = (p−q)/3 and M ≥ M₀.
pub fn overlap_kappa(label: IrrepLabel, w: WeightLabel, u: f64, v: f64, x: f64, y: f64) -> Result<C64> {
    let (i02, m02) = i0_m0(label);
    if w.y3 != m02 || w.m2 < m02 || !w.is_valid(label) {
        return Ok(ZERO);
    }
    let c = C64::new(x, y);
    let kappa = c * (u * v);
    let (p, q) = (label.p, label.q);
    let lf = |n2: i32| log_factorial((n2 / 2) as u64);
    let (i2, m2) = (w.i2, w.m2);
    let ln_root = 0.5
        * (((i2 + 1) as f64).ln() + lf(i2 + m2) + lf(i2 - m02)
            - log_factorial((p + q + 1) as u64)
            - lf(i2 - m2)
            - lf(i2 + m02));
    let sign = if ((i02 - m2) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let mag = hyp0f1(label.k() * 2.0, kappa.norm_sqr())?.sqrt()
        * (-0.5 * (u * u + v * v)).exp()
        * u.powi(p as i32)
        * v.powi(q as i32)
        * (ln_root - lf(m2 - m02)).exp()
        * (1.0 - x * x - y * y).max(0.0).powf(0.25 * (m2 - m02) as f64);
    Ok(c.powi((i02 - m2) / 2) * (sign * mag))
}

/// Weight label (I, M, (p−q)/3) from doubled isospin values.
fn fiducial_weight(label: IrrepLabel, i2: i32, m2: i32) -> WeightLabel {
    WeightLabel::new(i2, m2, label.p as i32 - label.q as i32)
}

/// Components of N′|p,q;κ/uv⟩_κ on the κ-states |p,q;I,M,(p−q)/3⟩_κ.
pub fn kappa_fiducial_components(label: IrrepLabel, c: C64) -> Vec<(WeightLabel, C64)> {
    let (i02, m02) = i0_m0(label);
    let t2 = c.norm_sqr();
    let lf = |n2: i32| log_factorial((n2 / 2) as u64);
    let mut out = Vec::new();
    for i2 in (m02.abs()..=i02).step_by(2) {
        for m2 in (m02..=i2).step_by(2) {
            let sign = if ((i02 - m2) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let ln_root = 0.5 * (((i2 + 1) as f64).ln() + lf(i2 - m02) + lf(i2 + m2) - lf(i2 + m02) - lf(i2 - m2));
            let mag = (ln_root - lf(m2 - m02)).exp() * (1.0 - t2).max(0.0).powf(0.25 * (m2 - m02) as f64);
            out.push((fiducial_weight(label, i2, m2), c.powi((i02 - m2) / 2) * (sign * mag)));
        }
    }
    out
}

/// The unit vector |p,q;κ/uv⟩_κ, assembled from κ-states.
pub fn kappa_fiducial_state(
    space: &Arc<FockSpace>,
    label: IrrepLabel,
    report: &OrbitReport,
    tail_tolerance: f64,
) -> Result<Truncated> {
    let c = report.phase();
    let np = nprime(label, c.norm().min(1.0))?;
    let mut out = StateVector::zeros(space);
    let mut tail = 0.0f64;
    for (w, coeff) in kappa_fiducial_components(label, c) {
        let s = kappa_state(space, label, w, report.kappa, tail_tolerance)?;
        tail = tail.max(s.tail);
        out.axpy(coeff / np, &s.state)?;
    }
    Ok(Truncated { state: out, tail })
}

/// Fiducial vector of one expansion entry for the representative point of `report`.
pub fn fiducial_state(
    space: &Arc<FockSpace>,
    entry: &ExpansionEntry,
    report: &OrbitReport,
    tail_tolerance: f64,
) -> Result<Truncated> {
    let ExpansionLabel::Irrep(label) = entry.label else {
        return Err(Error::Domain("SU(2) entries have no SU(3) fiducial".into()));
    };
    match entry.fiducial {
        Fiducial::HighestWeight => {
            Ok(Truncated { state: highest_weight_state(space, label)?, tail: 0.0 })
        }
        Fiducial::KappaFiducial => kappa_fiducial_state(space, label, report, tail_tolerance),
        Fiducial::Su2Scalar => su2_scalar_kappa_state(space, label, report.kappa, tail_tolerance),
        Fiducial::SpinCoherent => Err(Error::Domain("spin-coherent fiducial in an SU(3) table".into())),
    }
}

/// ln|c_pq|² for the three SU(3) coefficient systems.
fn ln_weight(report: &OrbitReport, fiducial: Fiducial, p: u32, q: u32) -> Result<f64> {
    let (u, v) = (report.u, report.v);
    let ln_pow = |x: f64, n: u32| if n == 0 { 0.0 } else { 2.0 * n as f64 * x.ln() };
    let base = -(u * u + v * v) + ln_pow(u, p) + ln_pow(v, q);
    let label = IrrepLabel::new(p, q);
    Ok(match fiducial {
        Fiducial::HighestWeight => base - log_factorial(p as u64) - log_factorial(q as u64),
        Fiducial::KappaFiducial => {
            base + hyp0f1(label.k() * 2.0, report.kappa.norm_sqr())?.ln() - log_factorial((p + q + 1) as u64)
                + nprime_squared(label, report.t().min(1.0))?.ln()
        }
        Fiducial::Su2Scalar => {
            base + (((p + 1) * (q + 1)) as f64).ln() - log_factorial((p + q + 1) as u64)
                + hyp0f1(label.k() * 2.0, (u * v).powi(2))?.ln()
        }
        Fiducial::SpinCoherent => unreachable!("not an SU(3) system"),
    })
}

/// Expansion of the representative |z⁽⁰⁾, w⁽⁰⁾⟩ of `report` over SU(3)
/// coherent states, for p + q ≤ p_max.
pub fn hw_to_su3_expansion(report: &OrbitReport, p_max: u32, tail_tolerance: f64) -> Result<ExpansionTable> {
    let fiducial = match report.class {
        OrbitClass::A => return Err(Error::TrivialOrbit('a')),
        OrbitClass::B | OrbitClass::C => Fiducial::HighestWeight,
        OrbitClass::D if report.kappa == ZERO => Fiducial::HighestWeight,
        OrbitClass::D => Fiducial::KappaFiducial,
        OrbitClass::E => Fiducial::Su2Scalar,
    };
    let allowed = |p: u32, q: u32| match report.class {
        OrbitClass::B => q == 0,
        OrbitClass::C => p == 0,
        _ => true,
    };
    let phase = |q: u32| match report.class {
        OrbitClass::E => report.phase().powu(q),
        _ => C64::new(1.0, 0.0),
    };
    let mut entries = Vec::new();
    for n in 0..=p_max {
        for p in (0..=n).rev() {
            let q = n - p;
            if !allowed(p, q) {
                continue;
            }
            let mag = (0.5 * ln_weight(report, fiducial, p, q)?).exp();
            entries.push(ExpansionEntry {
                label: ExpansionLabel::Irrep(IrrepLabel::new(p, q)),
                coefficient: phase(q) * mag,
                fiducial,
            });
        }
    }
    let mut err = None;
    let tail = series_tail(p_max, |n| {
        (0..=n)
            .filter(|&p| allowed(p, n - p))
            .map(|p| match ln_weight(report, fiducial, p, n - p) {
                Ok(l) => l.exp(),
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            })
            .sum()
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    if tail > tail_tolerance {
        return Err(Error::TailBudget { tail, tolerance: tail_tolerance });
    }
    Ok(ExpansionTable { entries, tail })
}

/// Σ c_pq |fiducial_pq⟩ at the representative point; each fiducial is
/// truncated at the space cutoff and the largest fiducial tail is returned.
pub fn reconstruct_su3(
    space: &Arc<FockSpace>,
    report: &OrbitReport,
    table: &ExpansionTable,
    tail_tolerance: f64,
) -> Result<Truncated> {
    let mut out = StateVector::zeros(space);
    let mut tail = 0.0f64;
    for e in &table.entries {
        let ExpansionLabel::Irrep(label) = e.label else { continue };
        if label.grade(0) > space.cutoff() {
            continue;
        }
        let f = fiducial_state(space, e, report, tail_tolerance)?;
        tail = tail.max(f.tail);
        out.axpy(e.coefficient, &f.state)?;
    }
    Ok(Truncated { state: out, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::canonical_state;
    use crate::fock::{build_space, coherent_overlap, inner};
    use crate::groups::{haar_sample_su3, rep_operator};
    use crate::mc::chunk_rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn orbit_examples() {
        let o = c(0.0, 0.0);
        let r = classify_orbit(&CoherentLabel::new([o; 3], [o; 3]), ORBIT_TOLERANCE);
        assert_eq!(r.class, OrbitClass::A);
        let r = classify_orbit(&CoherentLabel::new([c(1.0, 0.0), o, o], [o; 3]), ORBIT_TOLERANCE);
        assert_eq!((r.class, r.u), (OrbitClass::B, 1.0));
        let r = classify_orbit(&CoherentLabel::new([c(1.0, 0.0), o, o], [o, c(1.0, 0.0), o]), ORBIT_TOLERANCE);
        assert_eq!((r.class, r.u, r.v, r.xy), (OrbitClass::D, 1.0, 1.0, Some((0.0, 0.0))));
        let r = classify_orbit(&CoherentLabel::new([o, o, c(1.0, 0.0)], [o, o, c(0.0, 1.0)]), ORBIT_TOLERANCE);
        assert_eq!(r.class, OrbitClass::E);
        let (x, y) = r.xy.unwrap();
        assert!(x.abs() < 1e-15 && (y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn representatives() {
        let r = OrbitReport::class_d(1.0, 1.0, 0.0, 0.0).unwrap();
        let l = representative_label(&r);
        assert_eq!(l.z, [c(1.0, 0.0), ZERO, ZERO]);
        assert_eq!(l.w, [ZERO, c(1.0, 0.0), ZERO]);
        let r = OrbitReport::class_e(1.0, 2.0, PI / 2.0).unwrap();
        let l = representative_label(&r);
        assert_eq!(l.z, [ZERO, ZERO, c(1.0, 0.0)]);
        assert!((l.w[2] - c(0.0, 2.0)).norm() < 1e-15 && l.w[0] == ZERO);
    }

    #[test]
    fn su2_overlap_examples() {
        assert!((su2_scs_overlap(3, 0.7, 1.1, 0.7, 1.1) - 1.0).norm() < 1e-15);
        assert!(su2_scs_overlap(2, 0.0, 0.0, PI, 0.3).norm() < 1e-15);
        assert!((su2_scs_overlap(1, 0.0, 0.0, PI / 2.0, 0.0) - 0.5f64.sqrt()).norm() < 1e-15);
        let s = build_space(2, 6).unwrap();
        for j2 in 0..=6 {
            let a = su2_scs_state(&s, j2, 0.4, -0.9).unwrap();
            let b = su2_scs_state(&s, j2, 2.1, 0.5).unwrap();
            assert!((inner(&a, &b).unwrap() - su2_scs_overlap(j2, 0.4, -0.9, 2.1, 0.5)).norm() < 1e-14);
        }
    }

    #[test]
    fn su2_expansion() {
        let t = hw_to_su2_expansion(0.0, 0.3, 6).unwrap();
        assert_eq!(t.entries[0].coefficient, c(1.0, 0.0));
        assert!(t.entries[1..].iter().all(|e| e.coefficient == ZERO));
        let t = hw_to_su2_expansion(1.0, 0.0, 40).unwrap();
        assert!((t.entries[1].coefficient.re - (-0.5f64).exp()).abs() < 1e-15);
        let t = hw_to_su2_expansion(1.0, 0.0, 40).unwrap();
        assert!((t.weight() + t.tail - 1.0).abs() < 1e-14);
        let s = build_space(2, 40).unwrap();
        for &(r, alpha, theta, phi) in &[(1.0, 0.0, 0.0, 0.0), (1.5, 0.4, 1.2, -2.0), (0.7, -1.0, 2.8, 0.9)] {
            let z = su2_label(r, alpha, theta, phi);
            let coh = crate::fock::coherent_state(&s, &z, 1e-10).unwrap();
            let t = hw_to_su2_expansion(r, alpha, 40).unwrap();
            let rec = reconstruct_su2(&s, &t, theta, phi).unwrap();
            assert!(rec.sub(&coh.state).unwrap().norm() < 1e-13);
        }
    }

    #[test]
    fn nprime_routes() {
        let l = IrrepLabel::new(1, 1);
        assert!((nprime(l, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((nprime(l, 0.0).unwrap() - 6f64.sqrt()).abs() < 1e-14);
        let l = IrrepLabel::new(3, 2);
        let a = nprime_squared(l, 0.4).unwrap();
        assert!((a - nprime_squared_double_sum(l, 0.4).unwrap()).abs() < 1e-10 * a);
        for p in 0..6 {
            for q in 0..6 {
                let l = IrrepLabel::new(p, q);
                let want = (factorial_ratio(p + q + 1, p, q)).sqrt();
                assert!((nprime(l, 0.0).unwrap() - want).abs() < 1e-12 * want);
                for &t in &[0.1, 0.5, 0.9, 1.0] {
                    let a = nprime_squared(l, t).unwrap();
                    assert!((a - nprime_squared_double_sum(l, t).unwrap()).abs() < 1e-11 * a, "{l} {t}");
                    assert!((a - nprime_squared_jacobi(l, t).unwrap()).abs() < 1e-9 * a, "{l} {t}");
                }
            }
        }
        assert!(nprime(l, 1.5).is_err());
    }

    fn factorial_ratio(n: u32, a: u32, b: u32) -> f64 {
        (log_factorial(n as u64) - log_factorial(a as u64) - log_factorial(b as u64)).exp()
    }

    #[test]
    fn fiducial_components_normalized() {
        for (p, q) in [(1, 1), (2, 0), (0, 3), (3, 2)] {
            let l = IrrepLabel::new(p, q);
            for &c in &[C64::new(0.5, 0.0), C64::new(0.1, -0.6), ZERO] {
                let s: f64 = kappa_fiducial_components(l, c).iter().map(|(_, a)| a.norm_sqr()).sum();
                assert!((s - nprime_squared(l, c.norm()).unwrap()).abs() < 1e-12 * s);
            }
        }
    }

    #[test]
    fn kappa_overlap_against_fock() {
        let s = build_space(6, 14).unwrap();
        let (u, v, x, y) = (1.0, 1.0, 0.5, 0.0);
        let rep = representative_label(&OrbitReport::class_d(u, v, x, y).unwrap());
        let l = IrrepLabel::new(1, 1);
        let w = WeightLabel::new(2, 0, 0);
        let k = kappa_state(&s, l, w, c(x * u * v, y * u * v), 1e-8).unwrap();
        let brute = coherent_overlap(&k.state, &rep.modes());
        let closed = overlap_kappa(l, w, u, v, x, y).unwrap();
        assert!((brute - closed).norm() < 1e-6 + k.tail.sqrt());
        assert_eq!(overlap_kappa(l, WeightLabel::new(1, 1, 3), u, v, x, y).unwrap(), ZERO);
    }

    #[test]
    fn kappa_overlap_all_low_weights() {
        let s = build_space(6, 12).unwrap();
        for &(u, v, x, y) in &[(1.0, 1.0, 0.5, 0.0), (1.0, 1.2, 0.3, 0.4), (0.8, 1.0, 0.0, 0.0)] {
            let rep = representative_label(&OrbitReport::class_d(u, v, x, y).unwrap());
            for l in crate::basis::irreps_up_to(3) {
                for w in l.weights() {
                    let k = kappa_state(&s, l, w, c(x, y) * (u * v), 1e-6).unwrap();
                    let brute = coherent_overlap(&k.state, &rep.modes());
                    let closed = overlap_kappa(l, w, u, v, x, y).unwrap();
                    assert!((brute - closed).norm() < 1e-8, "{l} {w}");
                }
            }
        }
    }

    #[test]
    fn highest_weight_limit() {
        // x = y = 0, M = I = I₀: the overlap reduces to the κ = 0 highest-weight coefficient
        let (u, v) = (0.9, 1.3);
        for l in crate::basis::irreps_up_to(4) {
            let o = overlap_kappa(l, l.highest_weight(), u, v, 0.0, 0.0).unwrap();
            let want = (-0.5 * (u * u + v * v)).exp() * u.powi(l.p as i32) * v.powi(l.q as i32)
                / (log_factorial(l.p as u64) + log_factorial(l.q as u64)).exp().sqrt();
            assert!((o - want).norm() < 1e-14, "{l}");
        }
    }

    #[test]
    fn su3_expansion_examples() {
        let d = OrbitReport::class_d(1.0, 1.0, 0.0, 0.0).unwrap();
        let t = hw_to_su3_expansion(&d, 14, 1e-6).unwrap();
        let c10 = t.coefficient(ExpansionLabel::Irrep(IrrepLabel::new(1, 0))).unwrap();
        assert!((c10.re - (-1f64).exp()).abs() < 1e-15);
        let e = OrbitReport::class_e(1.0, 1.0, 0.0).unwrap();
        let t = hw_to_su3_expansion(&e, 14, 1e-6).unwrap();
        let c00 = t.coefficient(ExpansionLabel::Irrep(IrrepLabel::new(0, 0))).unwrap();
        let want = (-1f64).exp() * hyp0f1(3.0, 1.0).unwrap().sqrt();
        assert!((c00.re - want).abs() < 1e-15 && (c00.re - 0.4318).abs() < 1e-4);
        let reports = [
            OrbitReport { class: OrbitClass::B, u: 1.0, v: 0.0, xy: None, kappa: ZERO },
            OrbitReport { class: OrbitClass::C, u: 0.0, v: 1.0, xy: None, kappa: ZERO },
            d,
            OrbitReport::class_d(1.0, 1.0, 0.3, -0.5).unwrap(),
            e,
            OrbitReport::class_e(1.0, 1.0, 2.0).unwrap(),
        ];
        for r in &reports {
            let t = hw_to_su3_expansion(r, 14, 1e-6).unwrap();
            assert!((t.weight() + t.tail - 1.0).abs() < 1e-6, "{r:?}");
        }
        let o = OrbitReport { class: OrbitClass::A, u: 0.0, v: 0.0, xy: None, kappa: ZERO };
        assert!(matches!(hw_to_su3_expansion(&o, 4, 1.0), Err(Error::TrivialOrbit('a'))));
    }

    #[test]
    fn kappa_zero_limit_matches_highest_weight_system() {
        // the κ-fiducial system at t → 0 reproduces the κ = 0 coefficients
        let a = hw_to_su3_expansion(&OrbitReport::class_d(1.1, 0.8, 0.0, 0.0).unwrap(), 10, 1e-3).unwrap();
        let b = hw_to_su3_expansion(&OrbitReport::class_d(1.1, 0.8, 1e-12, 0.0).unwrap(), 10, 1e-3).unwrap();
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert!((x.coefficient - y.coefficient).norm() < 1e-10);
        }
    }

    #[test]
    fn reconstruction_all_classes() {
        let s = build_space(6, 10).unwrap();
        let reports = [
            OrbitReport { class: OrbitClass::B, u: 0.8, v: 0.0, xy: None, kappa: ZERO },
            OrbitReport { class: OrbitClass::C, u: 0.0, v: 0.9, xy: None, kappa: ZERO },
            OrbitReport::class_d(0.8, 0.7, 0.0, 0.0).unwrap(),
            OrbitReport::class_d(0.8, 0.7, 0.3, -0.5).unwrap(),
            OrbitReport::class_e(0.8, 0.7, 1.0).unwrap(),
        ];
        for r in &reports {
            let label = representative_label(r);
            let coh = label.state(&s, 1e-3).unwrap();
            let table = hw_to_su3_expansion(r, 10, 1e-3).unwrap();
            let rec = reconstruct_su3(&s, r, &table, 1.0).unwrap();
            // with p + q ≤ Λ every grade ≤ Λ is reproduced exactly
            assert!(rec.state.sub(&coh.state).unwrap().norm() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn su3_covariance_of_reconstruction() {
        let s = build_space(6, 6).unwrap();
        let mut rng = chunk_rng(11, 0);
        let a = haar_sample_su3(&mut rng);
        let r = OrbitReport::class_d(0.6, 0.5, 0.2, 0.4).unwrap();
        let moved = representative_label(&r).transformed(&a);
        let report = classify_orbit(&moved, ORBIT_TOLERANCE);
        assert_eq!(report.class, OrbitClass::D);
        let table = hw_to_su3_expansion(&report, 6, 1e-2).unwrap();
        let rec = reconstruct_su3(&s, &report, &table, 1.0).unwrap();
        let ua = rep_operator(&s, &a).unwrap();
        let coh = moved.state(&s, 1e-2).unwrap();
        assert!(ua.apply(&rec.state).unwrap().sub(&coh.state).unwrap().norm() < 1e-12);
    }

    #[test]
    fn canonical_and_highest_weight_fiducial_agree() {
        let s = build_space(6, 5).unwrap();
        let l = IrrepLabel::new(2, 1);
        let r = OrbitReport::class_d(1.0, 1.0, 0.0, 0.0).unwrap();
        let f = kappa_fiducial_state(&s, l, &r, 0.0).unwrap();
        let h = canonical_state(&s, l, l.highest_weight(), 0).unwrap();
        assert!(f.state.sub(&h).unwrap().norm() < 1e-14);
    }

    #[test]
    fn invariance_of_orbit_data() {
        let mut rng = chunk_rng(5, 1);
        for k in 0..100 {
            let a = haar_sample_su3(&mut rng);
            let z = crate::groups::uniform_complex_sphere(&mut rng, 3);
            let w = crate::groups::uniform_complex_sphere(&mut rng, 3);
            let scale = 0.5 + k as f64 * 0.01;
            let label = CoherentLabel::new([z[0], z[1], z[2]], [w[0] * scale, w[1] * scale, w[2] * scale]);
            let r0 = classify_orbit(&label, ORBIT_TOLERANCE);
            let r1 = classify_orbit(&label.transformed(&a), ORBIT_TOLERANCE);
            assert_eq!(r0.class, r1.class);
            assert!((r0.u - r1.u).abs() < 1e-10 && (r0.v - r1.v).abs() < 1e-10);
            assert!((r0.kappa - r1.kappa).norm() < 1e-10);
            let rep = classify_orbit(&representative_label(&r0), ORBIT_TOLERANCE);
            assert!((rep.u - r0.u).abs() < 1e-12 && (rep.v - r0.v).abs() < 1e-12);
            assert!((rep.kappa - r0.kappa).norm() < 1e-12);
        }
    }
}
