//! Frame operators A(f) = ∫ f |coherent⟩⟨coherent| and their decompositions
//! into projectors: closed-form coefficients, measure identities, and the
//! Monte Carlo oracles that check them against Fock-space primitives.

use std::cell::{Cell, RefCell};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::Serialize;

use crate::basis::{canonical_state, irreps_up_to, kappa_state, IrrepLabel, WeightLabel};
use crate::coherent::{nprime_squared, representative_label, OrbitReport};
use crate::error::{Error, Result};
use crate::fock::{
    build_space, coherent_state, ladder, CoherentAmplitudes, FockSpace, Ladder, LinearOperator, Occupation,
    SparseState, StateVector,
};
use crate::groups::{haar_sample_su3, rep_operator_uniform, uniform_complex_sphere, SectorLayout, Su2Element, Su3Element};
use crate::mc::{self, McEstimate};
use crate::quad::{integrate, integrate_to_infinity, Integral, Tolerance};
use crate::specfun::{bessel_k, gamma, hyp0f1, laguerre, ln_gamma, log_factorial};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Quadrature tolerance for frame coefficients.
pub const FRAME_TOLERANCE: Tolerance = Tolerance { abs: 1e-15, rel: 1e-11 };

/// Weight f in A(f). For one and two oscillators the argument is x = |z|²;
/// for SU(3) frames it is f₀(u, v) on the slice selected by the projector family.
#[derive(Clone)]
pub enum WeightFunction {
    /// f ≡ 1.
    Constant,
    /// δ(x − r₀²).
    Shell { r0: f64 },
    /// δ(u − u₀) δ(v − v₀).
    ProductShell { u0: f64, v0: f64 },
    /// General f(x) ≥ 0 on [0, ∞).
    Radial(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// General f₀(u, v) ≥ 0 on [0, ∞)².
    Planar(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFunction::Constant => write!(f, "Constant"),
            WeightFunction::Shell { r0 } => write!(f, "Shell {{ r0: {r0} }}"),
            WeightFunction::ProductShell { u0, v0 } => write!(f, "ProductShell {{ u0: {u0}, v0: {v0} }}"),
            WeightFunction::Radial(_) => write!(f, "Radial(..)"),
            WeightFunction::Planar(_) => write!(f, "Planar(..)"),
        }
    }
}

impl WeightFunction {
    fn radial(&self) -> Result<Box<dyn Fn(f64) -> f64 + '_>> {
        match self {
            WeightFunction::Constant => Ok(Box::new(|_| 1.0)),
            WeightFunction::Radial(f) => Ok(Box::new(move |x| f(x))),
            other => Err(Error::Domain(format!("{other:?} is not a quadrature weight of x"))),
        }
    }

    fn planar(&self) -> Result<Box<dyn Fn(f64, f64) -> f64 + '_>> {
        match self {
            WeightFunction::Constant => Ok(Box::new(|_, _| 1.0)),
            WeightFunction::Planar(f) => Ok(Box::new(move |u, v| f(u, v))),
            other => Err(Error::Domain(format!("{other:?} is not a quadrature weight of (u, v)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorLabel {
    /// Fock level n of one oscillator.
    Level(u32),
    /// Spin j stored as 2j.
    Spin(u32),
    /// The (p,q) irrep inside the K₋ = κ eigenspace.
    Irrep { irrep: IrrepLabel, kappa: C64 },
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorLabel::Level(n) => write!(f, "n={n}"),
            SectorLabel::Spin(j2) if j2 % 2 == 0 => write!(f, "j={}", j2 / 2),
            SectorLabel::Spin(j2) => write!(f, "j={j2}/2"),
            SectorLabel::Irrep { irrep, kappa } => write!(f, "{irrep};kappa={}{:+}i", kappa.re, kappa.im),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FrameTerm {
    pub sector: SectorLabel,
    pub coefficient: f64,
    /// Quadrature error estimate, zero for closed forms.
    pub error: f64,
}

/// A(f) = Σ coefficient · P_sector over the listed sectors.
#[derive(Clone, Debug, Serialize)]
pub struct FrameDecomposition {
    pub terms: Vec<FrameTerm>,
}

impl FrameDecomposition {
    pub fn coefficient(&self, sector: SectorLabel) -> Option<f64> {
        self.terms.iter().find(|t| t.sector == sector).map(|t| t.coefficient)
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coefficient).collect()
    }
}

fn closed(sector: SectorLabel, coefficient: f64) -> FrameTerm {
    FrameTerm { sector, coefficient, error: 0.0 }
}

fn quadrature(sector: SectorLabel, i: Integral, scale: f64) -> FrameTerm {
    FrameTerm { sector, coefficient: i.value * scale, error: i.error * scale.abs() }
}

/// x^d e^{−x} with 0⁰ = 1.
fn power_exp(x: f64, d: f64) -> f64 {
    if x == 0.0 {
        return if d == 0.0 { 1.0 } else { 0.0 };
    }
    (d * x.ln() - x).exp()
}

/// One oscillator, frame of displaced number states D(z)|n₀⟩:
/// C_{n,n₀} = (n_<!/n_>!) ∫ f(x) x^{|n−n₀|} e^{−x} (L_{n_<}^{|n−n₀|}(x))² dx.
pub fn coeffs_1dof(f: &WeightFunction, n0: u32, n_max: u32) -> Result<FrameDecomposition> {
    let mut terms = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let (lo, hi) = (n.min(n0), n.max(n0));
        let d = (hi - lo) as f64;
        let ratio = (log_factorial(lo as u64) - log_factorial(hi as u64)).exp();
        let integrand = |x: f64| power_exp(x, d) * laguerre(lo, d, x).powi(2);
        let sector = SectorLabel::Level(n);
        terms.push(match f {
            WeightFunction::Shell { r0 } => closed(sector, ratio * integrand(r0 * r0)),
            _ => {
                let w = f.radial()?;
                quadrature(sector, integrate_to_infinity(|x| w(x) * integrand(x), 0.0, FRAME_TOLERANCE)?, ratio)
            }
        });
    }
    Ok(FrameDecomposition { terms })
}

/// Two oscillators: C_j = ∫ f(x) x^{2j+1} e^{−x} dx / (2j+1)!, for 2j ≤ j2_max.
pub fn coeffs_2dof(f: &WeightFunction, j2_max: u32) -> Result<FrameDecomposition> {
    let mut terms = Vec::with_capacity(j2_max as usize + 1);
    for j2 in 0..=j2_max {
        let d = (j2 + 1) as f64;
        let norm = (-log_factorial(j2 as u64 + 1)).exp();
        let sector = SectorLabel::Spin(j2);
        terms.push(match f {
            WeightFunction::Shell { r0 } => closed(sector, norm * power_exp(r0 * r0, d)),
            _ => {
                let w = f.radial()?;
                quadrature(sector, integrate_to_infinity(|x| w(x) * power_exp(x, d), 0.0, FRAME_TOLERANCE)?, norm)
            }
        });
    }
    Ok(FrameDecomposition { terms })
}

/// ∫₀^∞ du ∫_{v_min(u)}^∞ dv g(u, v).
fn planar_integral<G: Fn(f64, f64) -> f64>(g: G, v_min: impl Fn(f64) -> f64) -> Result<Integral> {
    let inner_error = Cell::new(0.0f64);
    let failure = RefCell::new(None);
    let outer = integrate_to_infinity(
        |u| match integrate_to_infinity(|v| g(u, v), v_min(u), FRAME_TOLERANCE) {
            Ok(i) => {
                inner_error.set(inner_error.get().max(i.error));
                i.value
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        },
        0.0,
        FRAME_TOLERANCE,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(Integral { value: outer.value, error: outer.error + inner_error.get(), evaluations: outer.evaluations })
}

fn irrep_sector(irrep: IrrepLabel, kappa: C64) -> SectorLabel {
    SectorLabel::Irrep { irrep, kappa }
}

/// SU(3) frame restricted to K₋ = 0:
/// C(f₀;p,q) = (2/π) ∫∫ u⁵v⁵ f₀ u^{2p} v^{2q} e^{−(u²+v²)} du dv / (p! q! d(p,q)).
pub fn coeffs_su3_h0(f0: &WeightFunction, p_max: u32) -> Result<FrameDecomposition> {
    let mut terms = Vec::new();
    for irrep in irreps_up_to(p_max) {
        let (p, q) = (irrep.p as f64, irrep.q as f64);
        let norm = 2.0 / PI / irrep.dimension() as f64;
        let ln_fact = log_factorial(irrep.p as u64) + log_factorial(irrep.q as u64);
        let sector = irrep_sector(irrep, ZERO);
        terms.push(match f0 {
            WeightFunction::ProductShell { u0, v0 } => closed(
                sector,
                norm * ((2.0 * p + 5.0) * u0.ln() + (2.0 * q + 5.0) * v0.ln() - u0 * u0 - v0 * v0 - ln_fact).exp(),
            ),
            _ => {
                let w = f0.planar()?;
                let g = |u: f64, v: f64| {
                    w(u, v) * power_exp(u * u, p + 2.5) * power_exp(v * v, q + 2.5) * (-ln_fact).exp()
                };
                quadrature(sector, planar_integral(g, |_| 0.0)?, norm)
            }
        });
    }
    Ok(FrameDecomposition { terms })
}

/// SU(3) frame restricted to K₋ = κ:
/// C(f₀;p,q;κ) = (2/π) ₀F₁(2k;|κ|²)/((p+q+1)! d) ∫∫ u⁵v⁵ f₀ θ(uv−|κ|)(1 − |κ|²/u²v²)
/// e^{−(u²+v²)} u^{2p} v^{2q} N′(p,q;|κ|/uv)² du dv.
pub fn coeffs_su3_kappa(f0: &WeightFunction, kappa: C64, p_max: u32) -> Result<FrameDecomposition> {
    let k_abs = kappa.norm();
    if let WeightFunction::ProductShell { u0, v0 } = f0 {
        if u0 * v0 <= k_abs {
            return Err(Error::Domain(format!("empty support: u0 v0 = {} <= |kappa| = {k_abs}", u0 * v0)));
        }
    }
    let mut terms = Vec::new();
    for irrep in irreps_up_to(p_max) {
        let (p, q) = (irrep.p as f64, irrep.q as f64);
        let norm = 2.0 / PI * hyp0f1(irrep.k2() as f64, k_abs * k_abs)?
            / irrep.dimension() as f64
            / (log_factorial((irrep.p + irrep.q + 1) as u64)).exp();
        let sector = irrep_sector(irrep, kappa);
        let body = |u: f64, v: f64| -> Result<f64> {
            let t = (k_abs / (u * v)).min(1.0);
            Ok(power_exp(u * u, p + 2.5) * power_exp(v * v, q + 2.5) * (1.0 - t * t) * nprime_squared(irrep, t)?)
        };
        terms.push(match f0 {
            WeightFunction::ProductShell { u0, v0 } => closed(sector, norm * body(*u0, *v0)?),
            _ => {
                let w = f0.planar()?;
                let g = |u: f64, v: f64| {
                    if u * v <= k_abs {
                        0.0
                    } else {
                        w(u, v) * body(u, v).unwrap_or(f64::NAN)
                    }
                };
                let v_min = |u: f64| if k_abs == 0.0 { 0.0 } else { k_abs / u };
                let i = planar_integral(g, v_min)?;
                if !i.value.is_finite() {
                    return Err(Error::NonConvergence { what: "kappa frame quadrature", iterations: i.evaluations });
                }
                quadrature(sector, i, norm)
            }
        });
    }
    Ok(FrameDecomposition { terms })
}

/// Class-e coefficient 2 e^{−(u²+v²)} u^{2p} v^{2q} ₀F₁(2k;u²v²)/(p+q+2)!.
fn class_e_coefficient(irrep: IrrepLabel, u: f64, v: f64) -> Result<f64> {
    let ln = -(u * u + v * v) + 2.0 * irrep.p as f64 * u.ln() + 2.0 * irrep.q as f64 * v.ln()
        - log_factorial((irrep.p + irrep.q + 2) as u64);
    Ok(2.0 * ln.exp() * hyp0f1(irrep.k2() as f64, (u * v).powi(2))?)
}

/// Haar average of the class-e dyad |Az⁽⁰⁾, A*w⁽⁰⁾⟩⟨·| on the sectors P^(p,q;uve^{iα}).
pub fn coeffs_class_e(u: f64, v: f64, alpha: f64, p_max: u32) -> Result<FrameDecomposition> {
    if u <= 0.0 || v <= 0.0 {
        return Err(Error::Domain(format!("class e needs u, v > 0, got {u}, {v}")));
    }
    let kappa = C64::from_polar(u * v, alpha);
    let terms = irreps_up_to(p_max)
        .into_iter()
        .map(|irrep| Ok(closed(irrep_sector(irrep, kappa), class_e_coefficient(irrep, u, v)?)))
        .collect::<Result<_>>()?;
    Ok(FrameDecomposition { terms })
}

/// Class-e coefficients smeared with f₀(u) δ(uv − |κ|) over u and v:
/// ∫₀^∞ du f₀(u)/u · C_pq(u, |κ|/u).
pub fn coeffs_class_e_smeared(
    f0: &(dyn Fn(f64) -> f64 + Sync),
    kappa: C64,
    p_max: u32,
) -> Result<FrameDecomposition> {
    let k_abs = kappa.norm();
    if k_abs == 0.0 {
        return Err(Error::Domain("smearing needs kappa != 0".into()));
    }
    let mut terms = Vec::new();
    for irrep in irreps_up_to(p_max) {
        let g = |u: f64| {
            if u == 0.0 {
                0.0
            } else {
                f0(u) / u * class_e_coefficient(irrep, u, k_abs / u).unwrap_or(f64::NAN)
            }
        };
        let i = integrate_to_infinity(g, 0.0, FRAME_TOLERANCE)?;
        terms.push(quadrature(irrep_sector(irrep, kappa), i, 1.0));
    }
    Ok(FrameDecomposition { terms })
}

/// Order of the Bessel function in the Sp(2,R) coherent-state measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureOrder {
    /// K_{2k−1}: the order for which the measure resolves the identity.
    TwoKMinusOne,
    /// K_{½−k}.
    HalfMinusK,
}

impl MeasureOrder {
    fn nu(&self, k: f64) -> f64 {
        match self {
            MeasureOrder::TwoKMinusOne => 2.0 * k - 1.0,
            MeasureOrder::HalfMinusK => 0.5 - k,
        }
    }
}

/// σ(|κ|²) = (2/Γ(2k)) ₀F₁(2k;|κ|²) |κ|^{2k−1} K_ν(2|κ|).
pub fn sp_measure_density(k2: u32, r: f64, order: MeasureOrder) -> Result<f64> {
    let k = 0.5 * k2 as f64;
    if r == 0.0 {
        return Ok(0.0);
    }
    let nu = order.nu(k).abs();
    Ok(2.0 / gamma(2.0 * k) * hyp0f1(2.0 * k, r * r)? * r.powf(2.0 * k - 1.0) * bessel_k(nu, 2.0 * r)?)
}

/// Beyond this radius the measure integrand is below e^{−100} relative.
const MEASURE_RADIUS: f64 = 60.0;

#[derive(Clone, Debug, Serialize)]
pub struct MeasureElement {
    pub k2: u32,
    pub m2: u32,
    pub value: f64,
    pub error: f64,
}

/// ∫ d²κ/π σ(|κ|²) |⟨k,m|k,κ⟩|² by radial quadrature, |⟨k,m|k,κ⟩|² taken from
/// the normalized coherent-state coefficients.
pub fn sp_measure_diagonal(k2: u32, rho: u32, order: MeasureOrder) -> Result<MeasureElement> {
    let two_k = k2 as f64;
    let ln_c = ln_gamma(two_k) - log_factorial(rho as u64) - ln_gamma(rho as f64 + two_k);
    let failure = RefCell::new(None);
    let g = |r: f64| {
        if r == 0.0 {
            return 0.0;
        }
        let coeff = match hyp0f1(two_k, r * r) {
            Ok(f) => (ln_c + 2.0 * rho as f64 * r.ln()).exp() / f,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                return 0.0;
            }
        };
        match sp_measure_density(k2, r, order) {
            Ok(s) => 2.0 * r * s * coeff,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };
    let i = integrate(g, 0.0, MEASURE_RADIUS, Tolerance { abs: 1e-14, rel: 1e-12 })?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(MeasureElement { k2, m2: k2 + 2 * rho, value: i.value, error: i.error })
}

/// The angular factor ∫₀^{2π} e^{i(ρ−ρ′)φ} dφ/2π of an off-diagonal measure element.
pub fn sp_measure_angular(rho: u32, rho_p: u32) -> Result<C64> {
    let d = rho as f64 - rho_p as f64;
    let tol = Tolerance { abs: 1e-15, rel: 1e-12 };
    let re = integrate(|phi| (d * phi).cos(), 0.0, 2.0 * PI, tol)?.value;
    let im = integrate(|phi| (d * phi).sin(), 0.0, 2.0 * PI, tol)?.value;
    Ok(C64::new(re, im) / (2.0 * PI))
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureReport {
    pub k2: u32,
    pub order: MeasureOrder,
    pub diagonal: Vec<MeasureElement>,
    pub max_deviation: f64,
    pub max_offdiagonal: f64,
}

/// Diagonal elements for ρ in `rhos` and the angular factors of all off-diagonal pairs.
pub fn sp_kappa_measure_check(k2: u32, rhos: &[u32], order: MeasureOrder) -> Result<MeasureReport> {
    let diagonal = rhos.iter().map(|&r| sp_measure_diagonal(k2, r, order)).collect::<Result<Vec<_>>>()?;
    let max_deviation = diagonal.iter().map(|e| (e.value - 1.0).abs()).fold(0.0, f64::max);
    let mut max_offdiagonal = 0.0f64;
    for &a in rhos {
        for &b in rhos {
            if a != b {
                max_offdiagonal = max_offdiagonal.max(sp_measure_angular(a, b)?.norm());
            }
        }
    }
    Ok(MeasureReport { k2, order, diagonal, max_deviation, max_offdiagonal })
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobianReport {
    pub u_moment: f64,
    pub v_moment: f64,
    pub disk: f64,
    pub value: f64,
    pub error: f64,
}

/// (2/π) ∫u⁵e^{−u²}du ∫v⁵e^{−v²}dv ∫∫_{x²+y²<1} (1 − x² − y²) dx dy.
pub fn jacobian_identity() -> Result<JacobianReport> {
    let tol = Tolerance { abs: 1e-15, rel: 1e-13 };
    let radial = integrate_to_infinity(|u| u.powi(5) * (-u * u).exp(), 0.0, tol)?;
    let inner_error = Cell::new(0.0f64);
    let failure = RefCell::new(None);
    let disk = integrate(
        |x| {
            let h = (1.0 - x * x).max(0.0).sqrt();
            match integrate(|y| 1.0 - x * x - y * y, -h, h, tol) {
                Ok(i) => {
                    inner_error.set(inner_error.get().max(i.error));
                    i.value
                }
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    0.0
                }
            }
        },
        -1.0,
        1.0,
        tol,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let value = 2.0 / PI * radial.value * radial.value * disk.value;
    let error = 2.0 / PI * (2.0 * radial.error * disk.value + disk.error + inner_error.get());
    Ok(JacobianReport { u_moment: radial.value, v_moment: radial.value, disk: disk.value, value, error })
}

/// Sampling route for the Klauder identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KlauderRoute {
    /// Independent standard complex Gaussians in every mode.
    Gaussian,
    /// (u, v, x, y, A) with density ∝ u⁵v⁵(1−x²−y²)e^{−u²−v²} and Haar A (six modes only).
    OrbitChart,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixElementCheck {
    pub row: String,
    pub col: String,
    pub expected: f64,
    pub re: McEstimate,
    pub im: McEstimate,
}

impl MatrixElementCheck {
    pub fn passed(&self, nsigma: f64, slack: f64) -> bool {
        self.re.agrees(self.expected, nsigma, slack) && self.im.agrees(0.0, nsigma, slack)
    }
}

/// e^{|λ|²}⟨n|λ⟩⟨λ|n′⟩ = Π λ^{n} λ̄^{n′}/√(n! n′!).
fn weighted_dyad(labels: &[C64], n: &Occupation, np: &Occupation) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for (j, l) in labels.iter().enumerate() {
        let (a, b) = (n.get(j) as u32, np.get(j) as u32);
        v *= l.powu(a) * l.conj().powu(b) / (log_factorial(a as u64) + log_factorial(b as u64)).exp().sqrt();
    }
    v
}

/// Monte Carlo estimate of matrix elements of ∫ dμ |λ⟩⟨λ|, expected to be δ_{nn′}.
pub fn klauder_mc_check(
    modes: usize,
    pairs: &[(Occupation, Occupation)],
    route: KlauderRoute,
    samples: usize,
    seed: u64,
) -> Result<Vec<MatrixElementCheck>> {
    if route == KlauderRoute::OrbitChart && modes != 6 {
        return Err(Error::ModeCount { expected: 6, found: modes });
    }
    for (a, b) in pairs {
        if a.modes() != modes || b.modes() != modes {
            return Err(Error::ModeCount { expected: modes, found: a.modes().max(b.modes()) });
        }
    }
    let radial = Gamma::<f64>::new(3.0, 1.0).expect("valid shape");
    let est = mc::estimate(seed, samples, 2 * pairs.len(), |rng, out| {
        let labels: Vec<C64> = match route {
            KlauderRoute::Gaussian => (0..modes)
                .map(|_| {
                    let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
                    C64::new(a, b) * 0.5f64.sqrt()
                })
                .collect(),
            KlauderRoute::OrbitChart => {
                let u = radial.sample(rng).sqrt();
                let v = radial.sample(rng).sqrt();
                // disk density (2/π)(1 − ρ²): ρ² = 1 − √(1 − U)
                let rho = (1.0 - (1.0 - rng.random::<f64>()).sqrt()).sqrt();
                let phi = 2.0 * PI * rng.random::<f64>();
                let report = OrbitReport::class_d(u, v, rho * phi.cos(), rho * phi.sin())
                    .expect("sampled point lies in the open disk");
                let a = haar_sample_su3(rng);
                representative_label(&report).transformed(&a).modes().to_vec()
            }
        };
        for (k, (n, np)) in pairs.iter().enumerate() {
            let d = weighted_dyad(&labels, n, np);
            out[2 * k] = d.re;
            out[2 * k + 1] = d.im;
        }
    });
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(k, (n, np))| MatrixElementCheck {
            row: n.to_string(),
            col: np.to_string(),
            expected: if n == np { 1.0 } else { 0.0 },
            re: est[2 * k],
            im: est[2 * k + 1],
        })
        .collect())
}

/// Closed-form coefficient compared with a Monte Carlo oracle.
#[derive(Clone, Debug, Serialize)]
pub struct FrameCheck {
    pub sector: SectorLabel,
    /// Magnetic label inside the sector when checks are per basis vector.
    pub component: Option<String>,
    pub closed_form: f64,
    pub estimate: McEstimate,
    /// Deterministic allowance: truncation tail plus a round-off floor.
    pub slack: f64,
}

impl FrameCheck {
    pub fn deviation(&self) -> f64 {
        (self.estimate.mean - self.closed_form).abs()
    }

    pub fn passed(&self, nsigma: f64) -> bool {
        self.estimate.agrees(self.closed_form, nsigma, self.slack)
    }
}

fn roundoff_floor(value: f64) -> f64 {
    1e-13 + 1e-10 * value.abs()
}

/// Cutoff of the single-oscillator space used by the angular oracles.
const ANGULAR_CUTOFF: usize = 60;

/// D(z)|n₀⟩ = (a† − z̄)^{n₀}/√(n₀!) |z⟩ on a single oscillator.
fn displaced_number_state(space: &Arc<FockSpace>, create: &LinearOperator, z: C64, n0: u32) -> StateVector {
    let mut psi = coherent_state(space, &[z], 1.0).expect("one mode").state;
    for k in 1..=n0 {
        let mut next = create.apply(&psi).expect("same space");
        next.axpy(-z.conj(), &psi).expect("same space");
        psi = next.scaled(C64::new(1.0 / (k as f64).sqrt(), 0.0));
    }
    psi
}

/// Angular average over θ of |⟨n|D(r₀e^{iθ})|n₀⟩|² against the shell coefficient.
pub fn mc_1dof_shell(r0: f64, n0: u32, n_max: u32, samples: usize, seed: u64) -> Result<Vec<FrameCheck>> {
    let space = build_space(1, ANGULAR_CUTOFF)?;
    let create = ladder(&space, 0, Ladder::Create)?;
    let closed = coeffs_1dof(&WeightFunction::Shell { r0 }, n0, n_max)?;
    let est = mc::estimate(seed, samples, n_max as usize + 1, |rng, out| {
        let z = C64::from_polar(r0, 2.0 * PI * rng.random::<f64>());
        let psi = displaced_number_state(&space, &create, z, n0);
        for (n, o) in out.iter_mut().enumerate() {
            *o = psi.amplitudes()[n].norm_sqr();
        }
    });
    let tail = psi_tail_bound(r0, n0, n_max);
    Ok(closed
        .terms
        .iter()
        .zip(est)
        .map(|(t, e)| FrameCheck {
            sector: t.sector,
            component: None,
            closed_form: t.coefficient,
            estimate: e,
            slack: tail + roundoff_floor(t.coefficient),
        })
        .collect())
}

/// Weight the truncated single-oscillator oracle loses above ANGULAR_CUTOFF.
fn psi_tail_bound(r0: f64, n0: u32, n_max: u32) -> f64 {
    let _ = n_max;
    crate::fock::poisson_tail(r0 * r0, ANGULAR_CUTOFF - n0 as usize) * (1u64 << n0.min(60)) as f64
}

/// Average over (α, n̂) of r₀²|⟨n₁,n₂|z⟩|², z = r₀e^{iα}(cos θ/2 e^{−iφ/2}, sin θ/2 e^{iφ/2}),
/// one check per |j,m⟩.
pub fn mc_2dof_shell(r0: f64, j2_max: u32, samples: usize, seed: u64) -> Result<Vec<FrameCheck>> {
    let closed = coeffs_2dof(&WeightFunction::Shell { r0 }, j2_max)?;
    let mut occs = Vec::new();
    for j2 in 0..=j2_max {
        for n1 in (0..=j2).rev() {
            occs.push((j2, Occupation::new(&[n1 as u16, (j2 - n1) as u16])));
        }
    }
    let est = mc::estimate(seed, samples, occs.len(), |rng, out| {
        let alpha = 2.0 * PI * rng.random::<f64>();
        let theta = (1.0 - 2.0 * rng.random::<f64>()).acos();
        let phi = 2.0 * PI * rng.random::<f64>();
        let z = crate::coherent::su2_label(r0, alpha, theta, phi);
        let table = CoherentAmplitudes::new(&z, j2_max as usize);
        for (o, (_, occ)) in out.iter_mut().zip(&occs) {
            *o = r0 * r0 * table.amplitude(occ).norm_sqr();
        }
    });
    Ok(occs
        .iter()
        .zip(est)
        .map(|((j2, occ), e)| {
            let c = closed.terms[*j2 as usize].coefficient;
            let m2 = occ.get(0) as i32 - occ.get(1) as i32;
            FrameCheck {
                sector: SectorLabel::Spin(*j2),
                component: Some(format!("2m={m2}")),
                closed_form: c,
                estimate: e,
                slack: roundoff_floor(c),
            }
        })
        .collect())
}

/// Basis vectors of one sector, kept sparse, with the largest truncation tail.
struct SectorStates {
    irrep: IrrepLabel,
    weights: Vec<WeightLabel>,
    states: Vec<SparseState>,
    tail: f64,
}

/// Haar oracle: prefactor · E_A |⟨e_w|Az⁽⁰⁾, A*w⁽⁰⁾⟩|² for every basis vector e_w of every sector.
/// By Schur's lemma each diagonal element equals the sector coefficient.
fn haar_diagonal(
    report: &OrbitReport,
    sectors: &[SectorStates],
    cutoff: usize,
    prefactor: f64,
    samples: usize,
    seed: u64,
) -> Vec<McEstimate> {
    let rep = representative_label(report);
    let dim = sectors.iter().map(|s| s.states.len()).sum();
    mc::estimate(seed, samples, dim, |rng, out| {
        let a = haar_sample_su3(rng);
        let table = CoherentAmplitudes::new(&rep.transformed(&a).modes(), cutoff);
        let states = sectors.iter().flat_map(|s| &s.states);
        for (o, e) in out.iter_mut().zip(states) {
            *o = prefactor * e.coherent_overlap(&table).norm_sqr();
        }
    })
}

fn sector_checks(
    closed: &FrameDecomposition,
    sectors: &[SectorStates],
    est: Vec<McEstimate>,
    prefactor: f64,
) -> Vec<FrameCheck> {
    let mut est = est.into_iter();
    let mut out = Vec::new();
    for s in sectors {
        let term = closed
            .terms
            .iter()
            .find(|t| matches!(t.sector, SectorLabel::Irrep { irrep, .. } if irrep == s.irrep))
            .expect("sector present");
        // |⟨e|x⟩|² − |⟨e_trunc|x⟩|² ≤ 2√tail + tail for unit |x⟩
        let slack = prefactor * (2.0 * s.tail.sqrt() + s.tail) + roundoff_floor(term.coefficient);
        for w in &s.weights {
            out.push(FrameCheck {
                sector: term.sector,
                component: Some(w.to_string()),
                closed_form: term.coefficient,
                estimate: est.next().expect("one estimate per basis vector"),
                slack,
            });
        }
    }
    out
}

/// Haar oracle for the K₋ = 0 shell frame: (2/π)u₀⁵v₀⁵ E_A|⟨e|A z⁽⁰⁾, A* w⁽⁰⁾⟩|².
pub fn mc_su3_h0_shell(u0: f64, v0: f64, p_max: u32, samples: usize, seed: u64) -> Result<Vec<FrameCheck>> {
    let space = build_space(6, p_max as usize)?;
    let sectors = irreps_up_to(p_max)
        .into_iter()
        .map(|irrep| {
            let weights = irrep.weights();
            let states = weights
                .iter()
                .map(|&w| canonical_state(&space, irrep, w, 0).map(|s| SparseState::new(&s)))
                .collect::<Result<Vec<_>>>()?;
            Ok(SectorStates { irrep, weights, states, tail: 0.0 })
        })
        .collect::<Result<Vec<_>>>()?;
    let closed = coeffs_su3_h0(&WeightFunction::ProductShell { u0, v0 }, p_max)?;
    let prefactor = 2.0 / PI * u0.powi(5) * v0.powi(5);
    let report = OrbitReport::class_d(u0, v0, 0.0, 0.0)?;
    let est = haar_diagonal(&report, &sectors, p_max as usize, prefactor, samples, seed);
    Ok(sector_checks(&closed, &sectors, est, prefactor))
}

fn kappa_sectors(space: &Arc<FockSpace>, p_max: u32, kappa: C64, tail_tolerance: f64) -> Result<Vec<SectorStates>> {
    irreps_up_to(p_max)
        .into_iter()
        .map(|irrep| {
            let mut tail = 0.0f64;
            let weights = irrep.weights();
            let states = weights
                .iter()
                .map(|&w| {
                    let t = kappa_state(space, irrep, w, kappa, tail_tolerance)?;
                    tail = tail.max(t.tail);
                    Ok(SparseState::new(&t.state))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SectorStates { irrep, weights, states, tail })
        })
        .collect()
}

/// Haar oracle for the K₋ = κ shell frame, κ-sector bases truncated at `cutoff`:
/// (2/π)u₀⁵v₀⁵(1 − |κ|²/u₀²v₀²) E_A|⟨e|A z⁽⁰⁾, A* w⁽⁰⁾⟩|².
pub fn mc_su3_kappa_shell(
    u0: f64,
    v0: f64,
    kappa: C64,
    p_max: u32,
    cutoff: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<FrameCheck>> {
    let space = build_space(6, cutoff)?;
    let sectors = kappa_sectors(&space, p_max, kappa, 1e-6)?;
    let closed = coeffs_su3_kappa(&WeightFunction::ProductShell { u0, v0 }, kappa, p_max)?;
    let c = kappa / (u0 * v0);
    let prefactor = 2.0 / PI * u0.powi(5) * v0.powi(5) * (1.0 - c.norm_sqr());
    let report = OrbitReport::class_d(u0, v0, c.re, c.im)?;
    let est = haar_diagonal(&report, &sectors, cutoff, prefactor, samples, seed);
    Ok(sector_checks(&closed, &sectors, est, prefactor))
}

/// Haar oracle for the class-e dyad average on the sectors P^(p,q;uve^{iα}).
pub fn mc_class_e(
    u: f64,
    v: f64,
    alpha: f64,
    p_max: u32,
    cutoff: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<FrameCheck>> {
    let space = build_space(6, cutoff)?;
    let kappa = C64::from_polar(u * v, alpha);
    let sectors = kappa_sectors(&space, p_max, kappa, 1e-6)?;
    let closed = coeffs_class_e(u, v, alpha, p_max)?;
    let report = OrbitReport::class_e(u, v, alpha)?;
    let est = haar_diagonal(&report, &sectors, cutoff, 1.0, samples, seed);
    Ok(sector_checks(&closed, &sectors, est, 1.0))
}

/// Schur average ∫dΩ/4π |j,n̂⟩⟨j,n̂| on the spin-j block, entries indexed by n₁ descending.
#[derive(Clone, Debug, Serialize)]
pub struct SchurAverage {
    pub j2: u32,
    pub re: Vec<McEstimate>,
    pub im: Vec<McEstimate>,
}

impl SchurAverage {
    pub fn dim(&self) -> usize {
        self.j2 as usize + 1
    }

    /// max over entries of |mean − δ/(2j+1)| − nsigma·σ (≤ 0 when consistent).
    pub fn worst_excess(&self, nsigma: f64) -> f64 {
        let d = self.dim();
        let mut worst = f64::NEG_INFINITY;
        for r in 0..d {
            for c in 0..d {
                let k = r * d + c;
                let want = if r == c { 1.0 / d as f64 } else { 0.0 };
                worst = worst.max((self.re[k].mean - want).abs() - nsigma * self.re[k].std_error);
                worst = worst.max(self.im[k].mean.abs() - nsigma * self.im[k].std_error);
            }
        }
        worst
    }

    pub fn to_matrix(&self) -> DMatrix<C64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |r, c| C64::new(self.re[r * d + c].mean, self.im[r * d + c].mean))
    }
}

pub fn schur_s2_average(j2: u32, samples: usize, seed: u64) -> SchurAverage {
    let d = j2 as usize + 1;
    let est = mc::estimate(seed, samples, 2 * d * d, |rng, out| {
        let theta = (1.0 - 2.0 * rng.random::<f64>()).acos();
        let phi = 2.0 * PI * rng.random::<f64>();
        let mut comps = crate::coherent::su2_scs_components(j2, theta, phi);
        comps.reverse();
        for r in 0..d {
            for c in 0..d {
                let z = comps[r] * comps[c].conj();
                out[2 * (r * d + c)] = z.re;
                out[2 * (r * d + c) + 1] = z.im;
            }
        }
    });
    SchurAverage {
        j2,
        re: est.iter().step_by(2).copied().collect(),
        im: est.iter().skip(1).step_by(2).copied().collect(),
    }
}

/// Entries of the Monte Carlo commutator [A(f;ψ₀), Ū] on low grades.
#[derive(Clone, Debug, Serialize)]
pub struct CommutatorMc {
    pub fiducial: String,
    pub max_grade: usize,
    pub re: Vec<McEstimate>,
    pub im: Vec<McEstimate>,
    /// max |mean|/σ over entries with σ > 0.
    pub max_significance: f64,
}

/// Shell frame of two-oscillator H-W coherent states with fiducial |n₀⟩:
/// estimates r₀² E_{S³}[D(z)|n₀⟩⟨n₀|D(z)†, Ū(u)] on grades ≤ max_grade.
pub fn gcs_commutator_check(
    r0: f64,
    fiducial: Occupation,
    u: &Su2Element,
    max_grade: usize,
    samples: usize,
    seed: u64,
) -> Result<CommutatorMc> {
    if fiducial.modes() != 2 {
        return Err(Error::ModeCount { expected: 2, found: fiducial.modes() });
    }
    let cutoff = max_grade + fiducial.total() + 40;
    let space = build_space(2, cutoff)?;
    let create = [ladder(&space, 0, Ladder::Create)?, ladder(&space, 1, Ladder::Create)?];
    let low = build_space(2, max_grade)?;
    let ubar = rep_operator_uniform(&low, &u.to_dmatrix())?.to_dense();
    let d = low.dim();
    let est = mc::estimate(seed, samples, 2 * d * d, |rng, out| {
        let s = uniform_complex_sphere(rng, 2);
        let z = [s[0] * r0, s[1] * r0];
        let mut psi = coherent_state(&space, &z, 1.0).expect("two modes").state;
        for (mode, c) in create.iter().enumerate() {
            for k in 1..=fiducial.get(mode) {
                let mut next = c.apply(&psi).expect("same space");
                next.axpy(-z[mode].conj(), &psi).expect("same space");
                psi = next.scaled(C64::new(1.0 / (k as f64).sqrt(), 0.0));
            }
        }
        let v = DMatrix::from_fn(d, 1, |i, _| psi.amplitudes()[i] * r0);
        let dyad = &v * v.adjoint();
        let comm = &dyad * &ubar - &ubar * &dyad;
        for r in 0..d {
            for c in 0..d {
                out[2 * (r * d + c)] = comm[(r, c)].re;
                out[2 * (r * d + c) + 1] = comm[(r, c)].im;
            }
        }
    });
    let re: Vec<McEstimate> = est.iter().step_by(2).copied().collect();
    let im: Vec<McEstimate> = est.iter().skip(1).step_by(2).copied().collect();
    let max_significance = re
        .iter()
        .chain(&im)
        .filter(|e| e.std_error > 1e-14)
        .map(|e| e.mean.abs() / e.std_error)
        .fold(0.0, f64::max);
    Ok(CommutatorMc { fiducial: fiducial.to_string(), max_grade, re, im, max_significance })
}

/// Frame operator Σ C(p,q) P^(p,q;κ) held as weighted dyads of sparse κ-sector basis vectors.
pub struct FrameOperator {
    space: Arc<FockSpace>,
    dyads: Vec<(f64, Vec<(usize, C64)>)>,
}

impl FrameOperator {
    /// Materializes every projector of `decomposition` that fits below the cutoff.
    pub fn assemble(space: &Arc<FockSpace>, decomposition: &FrameDecomposition, tail_tolerance: f64) -> Result<FrameOperator> {
        space.require_modes(6)?;
        let mut dyads = Vec::new();
        for t in &decomposition.terms {
            let SectorLabel::Irrep { irrep, kappa } = t.sector else {
                return Err(Error::Domain("only SU(3) sectors can be assembled on a six-mode space".into()));
            };
            if irrep.grade(0) > space.cutoff() {
                continue;
            }
            for w in irrep.weights() {
                let e = kappa_state(space, irrep, w, kappa, tail_tolerance)?.state;
                let entries = e.support().into_iter().map(|i| (i, e.amplitudes()[i])).collect();
                dyads.push((t.coefficient, entries));
            }
        }
        Ok(FrameOperator { space: space.clone(), dyads })
    }

    pub fn rank(&self) -> usize {
        self.dyads.len()
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if !Arc::ptr_eq(psi.space(), &self.space) {
            return Err(Error::SpaceMismatch);
        }
        let mut out = StateVector::zeros(&self.space);
        let x = psi.amplitudes();
        let y = out.amplitudes_mut();
        for (c, e) in &self.dyads {
            let overlap: C64 = e.iter().map(|&(i, a)| a.conj() * x[i]).sum::<C64>() * *c;
            for &(i, a) in e {
                y[i] += a * overlap;
            }
        }
        Ok(out)
    }
}

/// max over probes of ‖A U(g)ψ − U(g) A ψ‖.
pub fn frame_group_commutator(
    frame: &FrameOperator,
    layout: &Arc<SectorLayout>,
    g: &Su3Element,
    probes: &[StateVector],
) -> Result<f64> {
    let u = layout.rep(g);
    let mut worst = 0.0f64;
    for psi in probes {
        let lhs = frame.apply(&u.apply(psi)?)?;
        let rhs = u.apply(&frame.apply(psi)?)?;
        worst = worst.max(lhs.sub(&rhs)?.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::su2_section;
    use crate::mc::chunk_rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn klauder_one_and_two_dof() {
        let f = WeightFunction::Constant;
        for n0 in 0..3 {
            for t in coeffs_1dof(&f, n0, 12).unwrap().terms {
                assert!(close(t.coefficient, 1.0, 1e-8), "{t:?}");
            }
        }
        for t in coeffs_2dof(&f, 12).unwrap().terms {
            assert!(close(t.coefficient, 1.0, 1e-8));
        }
    }

    #[test]
    fn shell_examples() {
        let e1 = (-1f64).exp();
        let c = coeffs_1dof(&WeightFunction::Shell { r0: 1.0 }, 0, 3).unwrap();
        assert!(close(c.terms[0].coefficient, e1, 1e-15));
        let c = coeffs_1dof(&WeightFunction::Shell { r0: 1.0 }, 1, 3).unwrap();
        assert!(close(c.terms[0].coefficient, e1, 1e-15));
        let c = coeffs_2dof(&WeightFunction::Shell { r0: 1.0 }, 3).unwrap();
        assert!(close(c.terms[0].coefficient, e1, 1e-15));
        assert!(close(c.terms[1].coefficient, e1 / 2.0, 1e-15));
    }

    /// Composite Simpson rule on [a, b] with n (even) panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
        (f(a) + f(b) + inner) * h / 3.0
    }

    fn bump(centre: f64, width: f64) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
        move |x: f64| (-(x - centre).powi(2) / (2.0 * width * width)).exp() / (width * (2.0 * PI).sqrt())
    }

    #[test]
    fn radial_quadrature_matches_simpson() {
        let b = bump(1.69, 0.05);
        let f = WeightFunction::Radial(Arc::new(b));
        let n0 = 2u32;
        let a = coeffs_1dof(&f, n0, 6).unwrap();
        for t in &a.terms {
            let SectorLabel::Level(n) = t.sector else { unreachable!() };
            let (lo, hi) = (n.min(n0), n.max(n0));
            let d = (hi - lo) as f64;
            let ratio = (log_factorial(lo as u64) - log_factorial(hi as u64)).exp();
            let g = |x: f64| b(x) * power_exp(x, d) * laguerre(lo, d, x).powi(2) * ratio;
            assert!((t.coefficient - simpson(g, 0.0, 4.0, 40_000)).abs() < 1e-10, "{t:?}");
        }
        let shell = coeffs_1dof(&WeightFunction::Shell { r0: 1.3 }, n0, 6).unwrap();
        for (x, y) in a.terms.iter().zip(&shell.terms) {
            assert!((x.coefficient - y.coefficient).abs() < 0.05);
        }
    }

    #[test]
    fn su3_h0_examples() {
        let c = coeffs_su3_h0(&WeightFunction::Constant, 2).unwrap();
        assert!(close(c.terms[0].coefficient, 2.0 / PI, 1e-10));
        let c = coeffs_su3_h0(&WeightFunction::ProductShell { u0: 1.0, v0: 1.0 }, 2).unwrap();
        let e2 = (-2f64).exp();
        assert!(close(c.terms[0].coefficient, 2.0 / PI * e2, 1e-15));
        let c10 = c.coefficient(irrep_sector(IrrepLabel::new(1, 0), ZERO)).unwrap();
        assert!(close(c10, 2.0 / PI * e2 / 3.0, 1e-15));
    }

    #[test]
    fn su3_kappa_examples() {
        let f = WeightFunction::ProductShell { u0: 1.0, v0: 1.0 };
        let c = coeffs_su3_kappa(&f, C64::new(0.5, 0.0), 2).unwrap();
        let want = 2.0 / PI * hyp0f1(3.0, 0.25).unwrap() * (-2f64).exp() * 0.75;
        assert!(close(c.terms[0].coefficient, want, 1e-14));
        assert!(c.terms.iter().all(|t| t.coefficient >= 0.0));
        let h0 = coeffs_su3_h0(&f, 3).unwrap();
        let k0 = coeffs_su3_kappa(&f, ZERO, 3).unwrap();
        for (a, b) in h0.terms.iter().zip(&k0.terms) {
            assert!(close(a.coefficient, b.coefficient, 1e-13));
        }
        assert!(coeffs_su3_kappa(&f, C64::new(1.5, 0.0), 1).is_err());
    }

    #[test]
    fn su3_planar_quadrature() {
        let f = WeightFunction::Planar(Arc::new(|u: f64, v: f64| (-(u - 1.0).powi(2) - (v - 0.8).powi(2)).exp()));
        let h0 = coeffs_su3_h0(&f, 2).unwrap();
        let k0 = coeffs_su3_kappa(&f, ZERO, 2).unwrap();
        for (a, b) in h0.terms.iter().zip(&k0.terms) {
            assert!(close(a.coefficient, b.coefficient, 1e-9));
        }
        let k = coeffs_su3_kappa(&f, C64::new(0.2, 0.1), 2).unwrap();
        assert!(k.terms.iter().all(|t| t.coefficient > 0.0 && t.coefficient.is_finite()));
    }

    #[test]
    fn class_e_examples() {
        let c = coeffs_class_e(1.0, 1.0, 0.0, 1).unwrap();
        let e2 = (-2f64).exp();
        assert!(close(c.terms[0].coefficient, e2 * hyp0f1(3.0, 1.0).unwrap(), 1e-15));
        assert!((c.terms[0].coefficient - 0.1864).abs() < 1e-4);
        assert!(close(c.terms[1].coefficient, 2.0 * e2 * hyp0f1(4.0, 1.0).unwrap() / 6.0, 1e-15));
        let d = coeffs_class_e(1.0, 1.0, 1.3, 1).unwrap();
        assert_eq!(c.coefficients(), d.coefficients());
        let b = bump(1.0, 0.05);
        let sm = coeffs_class_e_smeared(&b, C64::new(1.0, 0.0), 1).unwrap();
        for (t, point) in sm.terms.iter().zip(&c.terms) {
            let SectorLabel::Irrep { irrep, .. } = t.sector else { unreachable!() };
            let g = |u: f64| b(u) / u * class_e_coefficient(irrep, u, 1.0 / u).unwrap();
            assert!((t.coefficient - simpson(g, 0.5, 1.5, 20_000)).abs() < 1e-10);
            assert!((t.coefficient - point.coefficient).abs() < 0.01);
        }
    }

    #[test]
    fn sp_measure() {
        for k2 in [3, 4, 5] {
            let rhos: Vec<u32> = (0..=5).collect();
            let r = sp_kappa_measure_check(k2, &rhos, MeasureOrder::TwoKMinusOne).unwrap();
            assert!(r.max_deviation < 1e-6, "{r:?}");
            assert!(r.max_offdiagonal < 1e-14);
        }
        // the order ½ − k gives Γ(5/2)Γ(3/2)/2 at k = m = 3/2
        let bad = sp_measure_diagonal(3, 0, MeasureOrder::HalfMinusK).unwrap();
        assert!((bad.value - gamma(2.5) * gamma(1.5) / 2.0).abs() < 1e-8);
        assert!((bad.value - 1.0).abs() > 0.4);
    }

    #[test]
    fn jacobian() {
        let j = jacobian_identity().unwrap();
        assert!((j.value - 1.0).abs() < 1e-10);
        assert!((j.disk - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn klauder_routes() {
        let o = |c: &[u16]| Occupation::new(c);
        let pairs = vec![
            (o(&[0; 6]), o(&[0; 6])),
            (o(&[1, 0, 0, 0, 0, 0]), o(&[1, 0, 0, 0, 0, 0])),
            (o(&[0, 0, 0, 0, 1, 0]), o(&[0, 0, 0, 0, 1, 0])),
            (o(&[1, 0, 0, 0, 1, 0]), o(&[1, 0, 0, 0, 1, 0])),
            (o(&[1, 0, 0, 0, 0, 0]), o(&[0, 1, 0, 0, 0, 0])),
            (o(&[0; 6]), o(&[1, 0, 0, 1, 0, 0])),
        ];
        for route in [KlauderRoute::Gaussian, KlauderRoute::OrbitChart] {
            for c in klauder_mc_check(6, &pairs, route, 20_000, 9).unwrap() {
                assert!(c.passed(5.0, 1e-12), "{route:?} {c:?}");
            }
        }
        assert!(klauder_mc_check(2, &[], KlauderRoute::OrbitChart, 10, 1).is_err());
    }

    #[test]
    fn angular_oracles() {
        for n0 in [0, 1, 2] {
            for c in mc_1dof_shell(1.2, n0, 6, 200, 3).unwrap() {
                assert!(c.passed(5.0), "{c:?}");
            }
        }
        for c in mc_2dof_shell(1.0, 4, 20_000, 4).unwrap() {
            assert!(c.passed(5.0), "{c:?}");
        }
    }

    #[test]
    fn haar_oracle_h0() {
        for c in mc_su3_h0_shell(1.0, 1.0, 2, 5_000, 8).unwrap() {
            assert!(c.passed(5.0), "{c:?}");
        }
    }

    #[test]
    fn schur_average() {
        let a = schur_s2_average(0, 100, 1);
        assert!((a.re[0].mean - 1.0).abs() < 1e-15);
        let a = schur_s2_average(1, 20_000, 2);
        assert!(a.worst_excess(5.0) <= 0.0);
    }

    #[test]
    fn gcs_spot_check() {
        let u = su2_section(1.1, 0.4);
        let vac = gcs_commutator_check(1.0, Occupation::new(&[0, 0]), &u, 2, 4_000, 5).unwrap();
        assert!(vac.max_significance < 5.0, "{vac:?}");
        let one = gcs_commutator_check(1.0, Occupation::new(&[1, 0]), &u, 2, 4_000, 5).unwrap();
        assert!(one.max_significance > 10.0, "{}", one.max_significance);
    }

    #[test]
    fn assembled_frame_commutes_with_group() {
        let s = build_space(6, 5).unwrap();
        let dec = coeffs_su3_h0(&WeightFunction::ProductShell { u0: 1.0, v0: 1.0 }, 5).unwrap();
        let frame = FrameOperator::assemble(&s, &dec, 0.0).unwrap();
        assert_eq!(frame.rank(), irreps_up_to(5).iter().map(|l| l.dimension() as usize).sum::<usize>());
        let layout = Arc::new(SectorLayout::new(&s).unwrap());
        let mut rng = chunk_rng(3, 0);
        let probe = StateVector::from_amplitudes(
            &s,
            (0..s.dim()).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect(),
        )
        .unwrap()
        .normalized();
        // a frame operator on the vacuum sector alone is the vacuum projector
        let vac = frame.apply(&StateVector::vacuum(&s)).unwrap();
        assert!((vac.amplitudes()[0].re - dec.terms[0].coefficient).abs() < 1e-15);
        for _ in 0..3 {
            let a = haar_sample_su3(&mut rng);
            assert!(frame_group_commutator(&frame, &layout, &a, std::slice::from_ref(&probe)).unwrap() < 1e-13);
        }
        // a non-invariant operator (a single dyad) fails the same test
        let single = FrameOperator { space: s.clone(), dyads: vec![frame.dyads[1].clone()] };
        let a = haar_sample_su3(&mut rng);
        assert!(frame_group_commutator(&single, &layout, &a, &[probe]).unwrap() > 1e-3);
    }
}
