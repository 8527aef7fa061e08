//! Lie-algebra operator sets on a FockSpace: Gell-Mann matrices, SU(3)
//! generators Q_α, Sp(2,R) generators, and the two-mode SU(2)×U(1) set.

use std::sync::Arc;

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{bilinear, pair_creation, FockSpace, LinearOperator, StateVector};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// The eight Gell-Mann matrices, λ₃ and λ₈ diagonal, f₁₂₃ = 1.
#[derive(Clone, Debug)]
pub struct GellMannSet(pub [Matrix3<C64>; 8]);

pub fn gell_mann() -> GellMannSet {
    let z = ZERO;
    let r = |x: f64| C64::new(x, 0.0);
    let s3 = 1.0 / 3f64.sqrt();
    GellMannSet([
        Matrix3::new(z, ONE, z, ONE, z, z, z, z, z),
        Matrix3::new(z, -I, z, I, z, z, z, z, z),
        Matrix3::new(ONE, z, z, z, -ONE, z, z, z, z),
        Matrix3::new(z, z, ONE, z, z, z, ONE, z, z),
        Matrix3::new(z, z, -I, z, z, z, I, z, z),
        Matrix3::new(z, z, z, z, z, ONE, z, ONE, z),
        Matrix3::new(z, z, z, z, z, -I, z, I, z),
        Matrix3::new(r(s3), z, z, z, r(s3), z, z, z, r(-2.0 * s3)),
    ])
}

impl GellMannSet {
    /// f_abc = Tr([λ_a, λ_b] λ_c) / (4i), zero-based indices.
    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> f64 {
        let l = &self.0;
        let comm = l[a] * l[b] - l[b] * l[a];
        ((comm * l[c]).trace() / (4.0 * I)).re
    }
}

/// SU(3) generators on a six-mode space together with the number operators.
#[derive(Clone, Debug)]
pub struct Su3Generators {
    /// Q_α = Q^(a)_α + Q^(b)_α, α = 1..8 stored at index α−1.
    pub q: Vec<LinearOperator>,
    pub qa: Vec<LinearOperator>,
    pub qb: Vec<LinearOperator>,
    pub n_a: LinearOperator,
    pub n_b: LinearOperator,
}

/// Sp(2,R) generators: J₀, K₁, K₂ hermitian, K± = K₁ ± iK₂.
#[derive(Clone, Debug)]
pub struct Sp2rGenerators {
    pub j0: LinearOperator,
    pub k1: LinearOperator,
    pub k2: LinearOperator,
    pub k_plus: LinearOperator,
    pub k_minus: LinearOperator,
}

/// Two-mode Schwinger generators J_j = ½ a†σ_j a and N̂.
#[derive(Clone, Debug)]
pub struct Su2Generators {
    pub j: Vec<LinearOperator>,
    pub n: LinearOperator,
}

fn matrix_bilinear(space: &Arc<FockSpace>, m: &Matrix3<C64>, offset: usize, scale: C64) -> LinearOperator {
    let mut coeffs = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if m[(i, j)] != ZERO {
                coeffs.push((offset + i, offset + j, scale * m[(i, j)]));
            }
        }
    }
    bilinear(space, &coeffs)
}

pub fn su3_generators(space: &Arc<FockSpace>) -> Result<Su3Generators> {
    space.require_modes(6)?;
    let gm = gell_mann();
    let half = C64::new(0.5, 0.0);
    let mut q = Vec::with_capacity(8);
    let mut qa = Vec::with_capacity(8);
    let mut qb = Vec::with_capacity(8);
    for l in &gm.0 {
        let a = matrix_bilinear(space, l, 0, half);
        let b = matrix_bilinear(space, &l.map(|x| x.conj()), 3, -half);
        q.push(a.add(&b)?);
        qa.push(a);
        qb.push(b);
    }
    let n_a = bilinear(space, &[(0, 0, ONE), (1, 1, ONE), (2, 2, ONE)]);
    let n_b = bilinear(space, &[(3, 3, ONE), (4, 4, ONE), (5, 5, ONE)]);
    Ok(Su3Generators { q, qa, qb, n_a, n_b })
}

/// K₊ = a†·b†; creation rows beyond the cutoff are dropped.
pub fn k_plus(space: &Arc<FockSpace>) -> Result<LinearOperator> {
    space.require_modes(6)?;
    Ok(pair_creation(space, &[(0, 3, ONE), (1, 4, ONE), (2, 5, ONE)]))
}

pub fn sp2r_generators(space: &Arc<FockSpace>) -> Result<Sp2rGenerators> {
    let kp = k_plus(space)?;
    // every K₋ entry connects two states inside the cutoff, so the adjoint is exact
    let km = kp.adjoint();
    let j0 = LinearOperator::diagonal(space, |o| C64::new(0.5 * (o.total() as f64 + 3.0), 0.0));
    let k1 = LinearOperator::linear_combination(&[(C64::new(0.5, 0.0), &kp), (C64::new(0.5, 0.0), &km)])?;
    let k2 = LinearOperator::linear_combination(&[(C64::new(0.0, -0.5), &kp), (C64::new(0.0, 0.5), &km)])?;
    Ok(Sp2rGenerators { j0, k1, k2, k_plus: kp, k_minus: km })
}

pub fn su2_u2_generators(space: &Arc<FockSpace>) -> Result<Su2Generators> {
    space.require_modes(2)?;
    let z = ZERO;
    let sigma = [
        Matrix2::new(z, ONE, ONE, z),
        Matrix2::new(z, -I, I, z),
        Matrix2::new(ONE, z, z, -ONE),
    ];
    let j = sigma
        .iter()
        .map(|s| {
            let mut coeffs = Vec::new();
            for a in 0..2 {
                for b in 0..2 {
                    if s[(a, b)] != z {
                        coeffs.push((a, b, 0.5 * s[(a, b)]));
                    }
                }
            }
            bilinear(space, &coeffs)
        })
        .collect();
    let n = bilinear(space, &[(0, 0, ONE), (1, 1, ONE)]);
    Ok(Su2Generators { j, n })
}

impl Su3Generators {
    /// Isospin I² = Q₁² + Q₂² + Q₃².
    pub fn isospin_squared(&self) -> Result<LinearOperator> {
        let mut acc = self.q[0].matmul(&self.q[0])?;
        for a in 1..3 {
            acc = acc.add(&self.q[a].matmul(&self.q[a])?)?;
        }
        Ok(acc)
    }

    /// Hypercharge Y = (2/√3) Q₈.
    pub fn hypercharge(&self) -> LinearOperator {
        self.q[7].scale(C64::new(2.0 / 3f64.sqrt(), 0.0))
    }

    /// Quadratic Casimir Σ_α Q_α².
    pub fn casimir(&self) -> Result<LinearOperator> {
        let mut acc = self.q[0].matmul(&self.q[0])?;
        for a in 1..8 {
            acc = acc.add(&self.q[a].matmul(&self.q[a])?)?;
        }
        Ok(acc)
    }
}

/// Casimir value (p² + q² + pq + 3p + 3q)/3 of the irrep (p,q).
pub fn casimir_value(p: u32, q: u32) -> f64 {
    let (p, q) = (p as f64, q as f64);
    (p * p + q * q + p * q + 3.0 * p + 3.0 * q) / 3.0
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorCheck {
    pub name: String,
    /// Largest |entry| of the residual on columns of grade ≤ Λ − margin.
    pub residual: f64,
    pub margin: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutationReport {
    pub checks: Vec<CommutatorCheck>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CommutationReport {
    fn from_checks(checks: Vec<CommutatorCheck>, tolerance: f64) -> CommutationReport {
        let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
        CommutationReport { checks, max_residual, tolerance, passed: max_residual < tolerance }
    }
}

/// Residual of [a,b] − expected restricted to interior columns.
fn residual(
    name: String,
    a: &LinearOperator,
    b: &LinearOperator,
    expected: &LinearOperator,
    margin: usize,
) -> Result<CommutatorCheck> {
    let cutoff = a.space().cutoff();
    let r = a.commutator(b)?.sub(expected)?;
    let value = if cutoff >= margin { r.max_abs_on_columns(cutoff - margin) } else { 0.0 };
    Ok(CommutatorCheck { name, residual: value, margin })
}

pub const INTERIOR_TOLERANCE: f64 = 1e-12;

/// [J₀, K₁] = iK₂, [J₀, K₂] = −iK₁, [K₁, K₂] = −iJ₀, plus [K₋, K₊] = 2J₀.
pub fn check_sp2r_relations(sp: &Sp2rGenerators) -> Result<CommutationReport> {
    let i = I;
    let checks = vec![
        residual("[J0,K1]-iK2".into(), &sp.j0, &sp.k1, &sp.k2.scale(i), 2)?,
        residual("[J0,K2]+iK1".into(), &sp.j0, &sp.k2, &sp.k1.scale(-i), 2)?,
        residual("[K1,K2]+iJ0".into(), &sp.k1, &sp.k2, &sp.j0.scale(-i), 2)?,
        residual("[K-,K+]-2J0".into(), &sp.k_minus, &sp.k_plus, &sp.j0.scale(C64::new(2.0, 0.0)), 2)?,
    ];
    Ok(CommutationReport::from_checks(checks, INTERIOR_TOLERANCE))
}

/// [Q_a, Q_b] = i f_abc Q_c for all a < b.
pub fn check_su3_relations(su3: &Su3Generators) -> Result<CommutationReport> {
    let gm = gell_mann();
    let mut checks = Vec::new();
    for a in 0..8 {
        for b in (a + 1)..8 {
            let mut terms = Vec::new();
            for c in 0..8 {
                let f = gm.structure_constant(a, b, c);
                if f.abs() > 1e-14 {
                    terms.push((I * f, &su3.q[c]));
                }
            }
            let expected = if terms.is_empty() {
                LinearOperator::zero(su3.q[0].space())
            } else {
                LinearOperator::linear_combination(&terms)?
            };
            checks.push(residual(format!("[Q{},Q{}]", a + 1, b + 1), &su3.q[a], &su3.q[b], &expected, 0)?);
        }
    }
    Ok(CommutationReport::from_checks(checks, INTERIOR_TOLERANCE))
}

/// [X, Q_α] = 0 for X ∈ {J₀, K₁, K₂, K₊, K₋, N̂_a+N̂_b}.
pub fn check_mutual_commutation(su3: &Su3Generators, sp: &Sp2rGenerators) -> Result<CommutationReport> {
    let space = su3.q[0].space();
    let zero = LinearOperator::zero(space);
    let n = su3.n_a.add(&su3.n_b)?;
    let named: [(&str, &LinearOperator, usize); 6] = [
        ("J0", &sp.j0, 0),
        ("K1", &sp.k1, 2),
        ("K2", &sp.k2, 2),
        ("K+", &sp.k_plus, 2),
        ("K-", &sp.k_minus, 2),
        ("N", &n, 0),
    ];
    let mut checks = Vec::new();
    for (name, x, margin) in named {
        for (a, q) in su3.q.iter().enumerate() {
            checks.push(residual(format!("[{name},Q{}]", a + 1), x, q, &zero, margin)?);
        }
    }
    Ok(CommutationReport::from_checks(checks, INTERIOR_TOLERANCE))
}

/// [J_j, J_k] = iε_jkl J_l and [J_j, N̂] = 0.
pub fn check_su2_relations(g: &Su2Generators) -> Result<CommutationReport> {
    let mut checks = Vec::new();
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        checks.push(residual(format!("[J{},J{}]", a + 1, b + 1), &g.j[a], &g.j[b], &g.j[c].scale(I), 0)?);
    }
    let zero = LinearOperator::zero(g.n.space());
    for a in 0..3 {
        checks.push(residual(format!("[J{},N]", a + 1), &g.j[a], &g.n, &zero, 0)?);
    }
    Ok(CommutationReport::from_checks(checks, INTERIOR_TOLERANCE))
}

/// Largest |entry| of X − X† on interior columns.
pub fn hermiticity_residual(x: &LinearOperator, margin: usize) -> Result<f64> {
    let d = x.sub(&x.adjoint())?;
    let cutoff = x.space().cutoff();
    Ok(d.max_abs_on_columns(cutoff.saturating_sub(margin)))
}

/// K₊ψ computed on the support of ψ without assembling the operator. Fails if
/// the result would leave the truncated space.
pub fn apply_k_plus(psi: &StateVector) -> Result<StateVector> {
    let space = psi.space();
    space.require_modes(6)?;
    let mut out = StateVector::zeros(space);
    for (i, a) in psi.amplitudes().iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        let occ = space.occupation(i);
        if occ.total() + 2 > space.cutoff() {
            return Err(Error::CutoffExceeded { needed: occ.total() + 2, cutoff: space.cutoff() });
        }
        for j in 0..3 {
            let target = occ.shifted(j, 1).and_then(|o| o.shifted(j + 3, 1)).expect("raising never underflows");
            let w = ((occ.get(j) as f64 + 1.0) * (occ.get(j + 3) as f64 + 1.0)).sqrt();
            let t = space.index(&target).expect("target within cutoff");
            out.amplitudes_mut()[t] += a * w;
        }
    }
    Ok(out)
}

/// K₋ψ = a·b ψ computed on the support of ψ.
pub fn apply_k_minus(psi: &StateVector) -> Result<StateVector> {
    let space = psi.space();
    space.require_modes(6)?;
    let mut out = StateVector::zeros(space);
    for (i, a) in psi.amplitudes().iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        let occ = space.occupation(i);
        for j in 0..3 {
            if let Some(target) = occ.shifted(j, -1).and_then(|o| o.shifted(j + 3, -1)) {
                let w = (occ.get(j) as f64 * occ.get(j + 3) as f64).sqrt();
                let t = space.index(&target).expect("lowering stays inside the space");
                out.amplitudes_mut()[t] += a * w;
            }
        }
    }
    Ok(out)
}
