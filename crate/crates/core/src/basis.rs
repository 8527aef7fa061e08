//! Labeled basis states of the six-oscillator space: highest-weight vectors,
//! the canonical |p,q;I,M,Y;m⟩ family, SU(2)-scalar vectors, Sp(2,R)
//! K₋-eigenstates and the ξ-space wavefunctions of states annihilated by K₋.
//!
//! Half-integer and thirds-valued quantum numbers are stored as integers:
//! 2I, 2M, 3Y and 2k, 2m.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::algebra::{apply_k_minus, apply_k_plus, casimir_value};
use crate::error::{Error, Result};
use crate::fock::{FockSpace, Occupation, StateVector, Truncated};
use crate::specfun::{factorial, hyp0f1, ln_gamma, log_factorial};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Relative residual ‖K₋ψ‖/‖ψ‖ accepted as "annihilated by K₋".
pub const NULL_SPACE_TOLERANCE: f64 = 1e-10;

/// SU(3) irrep (p,q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IrrepLabel {
    pub p: u32,
    pub q: u32,
}

/// Weight (I, M, Y) stored as (2I, 2M, 3Y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightLabel {
    pub i2: i32,
    pub m2: i32,
    pub y3: i32,
}

/// Sp(2,R) discrete-series label (k, m) stored as (2k, 2m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpWeight {
    pub k2: u32,
    pub m2: u32,
}

impl IrrepLabel {
    pub fn new(p: u32, q: u32) -> IrrepLabel {
        IrrepLabel { p, q }
    }

    /// d(p,q) = ½(p+1)(q+1)(p+q+2).
    pub fn dimension(&self) -> u64 {
        let (p, q) = (self.p as u64, self.q as u64);
        (p + 1) * (q + 1) * (p + q + 2) / 2
    }

    /// 2k = p + q + 3.
    pub fn k2(&self) -> u32 {
        self.p + self.q + 3
    }

    pub fn k(&self) -> f64 {
        0.5 * self.k2() as f64
    }

    pub fn casimir(&self) -> f64 {
        casimir_value(self.p, self.q)
    }

    /// Total quanta p + q + 2ρ of the ρ-th occurrence.
    pub fn grade(&self, rho: u32) -> usize {
        (self.p + self.q + 2 * rho) as usize
    }

    /// All weights, ordered by r, then s, then M ascending.
    pub fn weights(&self) -> Vec<WeightLabel> {
        let mut out = Vec::with_capacity(self.dimension() as usize);
        for r in 0..=self.p as i32 {
            for s in 0..=self.q as i32 {
                let i2 = r + s;
                let y3 = 2 * (self.q as i32 - self.p as i32) + 3 * (r - s);
                for m2 in (-i2..=i2).step_by(2) {
                    out.push(WeightLabel { i2, m2, y3 });
                }
            }
        }
        out
    }

    /// I = M = ½(p+q), Y = (p−q)/3.
    pub fn highest_weight(&self) -> WeightLabel {
        let i2 = (self.p + self.q) as i32;
        WeightLabel { i2, m2: i2, y3: self.p as i32 - self.q as i32 }
    }

    /// I = M = 0, Y = ⅔(q−p).
    pub fn su2_scalar_weight(&self) -> WeightLabel {
        WeightLabel { i2: 0, m2: 0, y3: 2 * (self.q as i32 - self.p as i32) }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

pub fn dimension(label: IrrepLabel) -> u64 {
    label.dimension()
}

pub fn k_of(label: IrrepLabel) -> f64 {
    label.k()
}

/// Irreps with p + q ≤ n, ordered by p + q then p.
pub fn irreps_up_to(n: u32) -> Vec<IrrepLabel> {
    (0..=n).flat_map(|t| (0..=t).rev().map(move |p| IrrepLabel::new(p, t - p))).collect()
}

impl WeightLabel {
    pub fn new(i2: i32, m2: i32, y3: i32) -> WeightLabel {
        WeightLabel { i2, m2, y3 }
    }

    pub fn isospin(&self) -> f64 {
        0.5 * self.i2 as f64
    }

    pub fn m(&self) -> f64 {
        0.5 * self.m2 as f64
    }

    pub fn y(&self) -> f64 {
        self.y3 as f64 / 3.0
    }

    /// (r, s) with r = I + Y/2 + (p−q)/3 and s = I − Y/2 + (q−p)/3; the
    /// weight is valid iff both are integers in range, r + s = 2I and |M| ≤ I
    /// with M ≡ I mod 1.
    pub fn rs(&self, label: IrrepLabel) -> Result<(u32, u32)> {
        let invalid = || Error::InvalidWeight { p: label.p, q: label.q, i2: self.i2, m2: self.m2, y3: self.y3 };
        let (p, q) = (label.p as i32, label.q as i32);
        let r6 = 3 * self.i2 + self.y3 + 2 * (p - q);
        let s6 = 3 * self.i2 - self.y3 + 2 * (q - p);
        if r6 % 6 != 0 || s6 % 6 != 0 {
            return Err(invalid());
        }
        let (r, s) = (r6 / 6, s6 / 6);
        let ok = (0..=p).contains(&r)
            && (0..=q).contains(&s)
            && r + s == self.i2
            && self.m2.abs() <= self.i2
            && (self.i2 - self.m2) % 2 == 0;
        if ok {
            Ok((r as u32, s as u32))
        } else {
            Err(invalid())
        }
    }

    pub fn is_valid(&self, label: IrrepLabel) -> bool {
        self.rs(label).is_ok()
    }
}

impl fmt::Display for WeightLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = |n: i32| if n % 2 == 0 { format!("{}", n / 2) } else { format!("{}/2", n) };
        let third = |n: i32| if n % 3 == 0 { format!("{}", n / 3) } else { format!("{}/3", n) };
        write!(f, "I={},M={},Y={}", half(self.i2), half(self.m2), third(self.y3))
    }
}

impl SpWeight {
    pub fn new(k2: u32, m2: u32) -> Result<SpWeight> {
        if k2 == 0 || m2 < k2 || !(m2 - k2).is_multiple_of(2) {
            return Err(Error::Domain(format!("invalid Sp(2,R) weight 2k={k2}, 2m={m2}")));
        }
        Ok(SpWeight { k2, m2 })
    }

    pub fn lowest(label: IrrepLabel) -> SpWeight {
        SpWeight { k2: label.k2(), m2: label.k2() }
    }

    /// ρ = m − k.
    pub fn rho(&self) -> u32 {
        (self.m2 - self.k2) / 2
    }

    pub fn m(&self) -> f64 {
        0.5 * self.m2 as f64
    }
}

fn require_grade(space: &FockSpace, grade: usize) -> Result<()> {
    space.require_modes(6)?;
    if grade > space.cutoff() {
        return Err(Error::CutoffExceeded { needed: grade, cutoff: space.cutoff() });
    }
    Ok(())
}

/// Adds c·Π(a†)^{n}|0⟩ = c·Π√(n!)|n⟩.
fn add_monomial(psi: &mut StateVector, counts: [u16; 6], c: f64) {
    let occ = Occupation::new(&counts);
    let w: f64 = counts.iter().map(|&n| factorial(n as u64).sqrt()).product();
    let i = psi.space().index(&occ).expect("monomial within cutoff");
    psi.amplitudes_mut()[i] += C64::new(c * w, 0.0);
}

/// (a₁†)^p (b₂†)^q/√(p!q!) |0⟩.
pub fn highest_weight_state(space: &Arc<FockSpace>, label: IrrepLabel) -> Result<StateVector> {
    require_grade(space, label.grade(0))?;
    let occ = Occupation::new(&[label.p as u16, 0, 0, 0, label.q as u16, 0]);
    Ok(StateVector::basis(space, space.index(&occ).expect("within cutoff")))
}

/// The m = k member of the canonical family, built from the explicit
/// monomial expansion; every monomial pairs (a†b†)-contractions of the two
/// isospin doublets with a₃†, b₃† powers.
fn canonical_lowest(space: &Arc<FockSpace>, label: IrrepLabel, w: WeightLabel) -> Result<StateVector> {
    let (r, s) = w.rs(label)?;
    require_grade(space, label.grade(0))?;
    let (p, q) = (label.p as i64, label.q as i64);
    let (r, s) = (r as i64, s as i64);
    let imm = ((w.i2 - w.m2) / 2) as i64;
    let ipm = ((w.i2 + w.m2) / 2) as i64;
    let lf = |n: i64| log_factorial(n as u64);
    let ln_norm = 0.5
        * (lf(r) + lf(s) + lf(r + s + 1) + lf(p - r) + lf(q - s) + lf(p + s + 1) + lf(q + r + 1) - lf(p + q + 1));
    let ln_pref = ln_norm + 0.5 * (lf(ipm) + lf(imm) - lf(r + s));
    let mut psi = StateVector::zeros(space);
    for n in 0..=(p - r).min(q - s) {
        for l in 0..=imm {
            let (e1, e2, f1, f2) = (r - l, l, imm - l, s - imm + l);
            if e1 < 0 || f2 < 0 {
                continue;
            }
            let sign = if (n + imm - l) % 2 == 0 { 1.0 } else { -1.0 };
            let ln_c = ln_pref
                - lf(r + s + n + 1)
                - lf(e1)
                - lf(e2)
                - lf(f1)
                - lf(f2)
                - lf(p - r - n)
                - lf(q - s - n);
            for j in 0..=n {
                let c = sign * (ln_c - lf(j) - lf(n - j)).exp();
                let counts = [e1 + j, e2 + n - j, p - r - n, f1 + j, f2 + n - j, q - s - n].map(|x| x as u16);
                add_monomial(&mut psi, counts, c);
            }
        }
    }
    Ok(psi)
}

/// Applies √((2k−1)!/(ρ!(ρ+2k−1)!)) K₊^ρ to a lowest-weight vector.
fn raise(lowest: StateVector, k2: u32, rho: u32) -> Result<StateVector> {
    let mut psi = lowest;
    for _ in 0..rho {
        psi = apply_k_plus(&psi)?;
    }
    let (k2, rho) = (k2 as u64, rho as u64);
    let ln_c = 0.5 * (log_factorial(k2 - 1) - log_factorial(rho) - log_factorial(rho + k2 - 1));
    Ok(psi.scaled(C64::new(ln_c.exp(), 0.0)))
}

/// |p,q;I,M,Y;m⟩ with m = k + ρ.
pub fn canonical_state(space: &Arc<FockSpace>, label: IrrepLabel, w: WeightLabel, rho: u32) -> Result<StateVector> {
    require_grade(space, label.grade(rho))?;
    raise(canonical_lowest(space, label, w)?, label.k2(), rho)
}

/// |p,q;0,0,⅔(q−p);m⟩ from the direct n-sum over isoscalar pairs
/// a₁†b₁† + a₂†b₂†, m = k + ρ.
pub fn su2_scalar_state(space: &Arc<FockSpace>, label: IrrepLabel, rho: u32) -> Result<StateVector> {
    require_grade(space, label.grade(rho))?;
    let (p, q) = (label.p as u64, label.q as u64);
    let ln_pref =
        log_factorial(p) + log_factorial(q) + 0.5 * (((p + 1) * (q + 1)) as f64).ln() - 0.5 * log_factorial(p + q + 1);
    let mut psi = StateVector::zeros(space);
    for n in 0..=p.min(q) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let ln_c = ln_pref - log_factorial(n + 1) - log_factorial(p - n) - log_factorial(q - n);
        for j in 0..=n {
            let c = sign * (ln_c - log_factorial(j) - log_factorial(n - j)).exp();
            let counts = [j, n - j, p - n, j, n - j, q - n].map(|x| x as u16);
            add_monomial(&mut psi, counts, c);
        }
    }
    raise(psi, label.k2(), rho)
}

/// Coefficients c_ρ of |k,κ⟩ = Σ_ρ c_ρ |k, k+ρ⟩ for ρ = 0..=rho_max:
/// c_ρ = ₀F₁(2k;|κ|²)^{−1/2} √(Γ(2k)/(ρ!Γ(ρ+2k))) κ^ρ.
pub fn sp_kappa_coefficients(k2: u32, kappa: C64, rho_max: u32) -> Result<Vec<C64>> {
    let two_k = k2 as f64;
    let mut c = C64::new(hyp0f1(two_k, kappa.norm_sqr())?.powf(-0.5), 0.0);
    let mut out = Vec::with_capacity(rho_max as usize + 1);
    for rho in 0..=rho_max {
        out.push(c);
        c *= kappa / ((rho as f64 + 1.0) * (rho as f64 + two_k)).sqrt();
    }
    Ok(out)
}

/// Σ_{ρ>rho_max} |c_ρ|², summed directly.
pub fn sp_kappa_tail(k2: u32, kappa_abs2: f64, rho_max: u32) -> Result<f64> {
    if kappa_abs2 == 0.0 {
        return Ok(0.0);
    }
    let two_k = k2 as f64;
    let f = hyp0f1(two_k, kappa_abs2)?;
    let n0 = rho_max as f64 + 1.0;
    let ln_t0 = ln_gamma(two_k) - ln_gamma(n0 + 1.0) - ln_gamma(n0 + two_k) + n0 * kappa_abs2.ln();
    let mut t = ln_t0.exp();
    let mut tail = 0.0;
    let mut n = n0;
    for _ in 0..100_000 {
        tail += t;
        t *= kappa_abs2 / ((n + 1.0) * (n + two_k));
        n += 1.0;
        if t <= 1e-17 * tail || t == 0.0 {
            return Ok(tail / f);
        }
    }
    Err(Error::NonConvergence { what: "kappa tail", iterations: 100_000 })
}

/// κ-deformed basis vector Σ_ρ c_ρ |p,q;I,M,Y;k+ρ⟩, truncated at the
/// space cutoff; the dropped squared norm is reported.
pub fn kappa_state(
    space: &Arc<FockSpace>,
    label: IrrepLabel,
    w: WeightLabel,
    kappa: C64,
    tail_tolerance: f64,
) -> Result<Truncated> {
    let lowest = canonical_lowest(space, label, w)?;
    kappa_tower(lowest, label, kappa, tail_tolerance)
}

/// Same construction starting from the SU(2)-scalar vector.
pub fn su2_scalar_kappa_state(
    space: &Arc<FockSpace>,
    label: IrrepLabel,
    kappa: C64,
    tail_tolerance: f64,
) -> Result<Truncated> {
    let lowest = su2_scalar_state(space, label, 0)?;
    kappa_tower(lowest, label, kappa, tail_tolerance)
}

fn kappa_tower(lowest: StateVector, label: IrrepLabel, kappa: C64, tail_tolerance: f64) -> Result<Truncated> {
    let space = lowest.space().clone();
    let rho_max = if kappa == ZERO { 0 } else { (space.cutoff() as u32 - label.p - label.q) / 2 };
    let tail = sp_kappa_tail(label.k2(), kappa.norm_sqr(), rho_max)?;
    if tail > tail_tolerance {
        return Err(Error::TailBudget { tail, tolerance: tail_tolerance });
    }
    // c_ρ √((2k−1)!/(ρ!(ρ+2k−1)!)) = ₀F₁^{−1/2} κ^ρ (2k−1)!/(ρ!(ρ+2k−1)!)
    let k2 = label.k2() as f64;
    let mut c = C64::new(hyp0f1(k2, kappa.norm_sqr())?.powf(-0.5), 0.0);
    let mut power = lowest.clone();
    let mut out = lowest.scaled(c);
    for rho in 1..=rho_max {
        power = apply_k_plus(&power)?;
        c *= kappa / (rho as f64 * (rho as f64 + k2 - 1.0));
        out.axpy(c, &power)?;
    }
    Ok(Truncated { state: out, tail })
}

/// All κ-states of the irrep (p,q), in `weights()` order.
pub fn irrep_kappa_states(
    space: &Arc<FockSpace>,
    label: IrrepLabel,
    kappa: C64,
    tail_tolerance: f64,
) -> Result<Vec<Truncated>> {
    label.weights().into_iter().map(|w| kappa_state(space, label, w, kappa, tail_tolerance)).collect()
}

/// ξ-space wavefunction of a K₋-annihilated state:
/// ψ(ξ) = Σ_n √((N_a+N_b+2)!) c_n Π ξ_j^{n_{a j}} ξ̄_j^{n_{b j}} / √(Π n!).
pub fn induced_wavefunction(psi: &StateVector, xi: &[C64; 3]) -> Result<C64> {
    let residual = apply_k_minus(psi)?.norm();
    if residual > NULL_SPACE_TOLERANCE * psi.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NotInNullSpace(residual));
    }
    Ok(induced_wavefunction_unchecked(psi, xi))
}

/// As `induced_wavefunction` without the null-space check.
pub fn induced_wavefunction_unchecked(psi: &StateVector, xi: &[C64; 3]) -> C64 {
    let space = psi.space();
    let cut = space.cutoff();
    let powers = |z: C64| {
        let mut v = Vec::with_capacity(cut + 1);
        let mut x = C64::new(1.0, 0.0);
        for n in 0..=cut {
            v.push(x / factorial(n as u64).sqrt());
            x *= z;
        }
        v
    };
    let pa: Vec<Vec<C64>> = xi.iter().map(|&z| powers(z)).collect();
    let pb: Vec<Vec<C64>> = xi.iter().map(|&z| powers(z.conj())).collect();
    let mut total = ZERO;
    for (i, a) in psi.amplitudes().iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        let c = space.occupation(i).counts();
        let mut t = *a * factorial(space.grade(i) as u64 + 2).sqrt();
        for j in 0..3 {
            t *= pa[j][c[j] as usize] * pb[j][c[j + 3] as usize];
        }
        total += t;
    }
    total
}

/// Labels of one grade-N basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BasisLabel {
    pub irrep: IrrepLabel,
    pub weight: WeightLabel,
    pub rho: u32,
}

/// All labels (p,q;I,M,Y;ρ) with p + q + 2ρ = grade.
pub fn grade_labels(grade: u32) -> Vec<BasisLabel> {
    let mut out = Vec::new();
    for rho in 0..=grade / 2 {
        let t = grade - 2 * rho;
        for p in 0..=t {
            let irrep = IrrepLabel::new(p, t - p);
            for weight in irrep.weights() {
                out.push(BasisLabel { irrep, weight, rho });
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletenessReport {
    pub grade: usize,
    pub count: usize,
    pub sector_dim: usize,
    pub max_gram_deviation: f64,
}

impl CompletenessReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.count == self.sector_dim && self.max_gram_deviation < tol
    }
}

type SparseColumn = Vec<(usize, C64)>;

/// Builds every canonical vector of one grade and measures the Gram matrix.
/// Vectors of different (M, Y) live on disjoint occupations, so only blocks
/// of equal (M, Y) can carry off-diagonal overlap and only those are formed.
pub fn grade_completeness(space: &Arc<FockSpace>, grade: usize) -> Result<CompletenessReport> {
    require_grade(space, grade)?;
    let range = space.grade_range(grade);
    let mut blocks: HashMap<(i32, i32), Vec<SparseColumn>> = HashMap::new();
    let labels = grade_labels(grade as u32);
    for l in &labels {
        let psi = canonical_state(space, l.irrep, l.weight, l.rho)?;
        let sparse: Vec<(usize, C64)> =
            range.clone().filter(|&i| psi.amplitudes()[i] != ZERO).map(|i| (i, psi.amplitudes()[i])).collect();
        blocks.entry((l.weight.m2, l.weight.y3)).or_default().push(sparse);
    }
    let mut dense = vec![ZERO; range.len()];
    let mut worst = 0.0f64;
    for vecs in blocks.values() {
        for (a, x) in vecs.iter().enumerate() {
            for &(i, v) in x {
                dense[i - range.start] = v;
            }
            for (b, y) in vecs.iter().enumerate().skip(a) {
                let g: C64 = y.iter().map(|&(i, v)| dense[i - range.start].conj() * v).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - want).norm());
            }
            for &(i, _) in x {
                dense[i - range.start] = ZERO;
            }
        }
    }
    Ok(CompletenessReport { grade, count: labels.len(), sector_dim: range.len(), max_gram_deviation: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sp2r_generators, su3_generators};
    use crate::fock::{build_space, inner};

    #[test]
    fn dimensions_and_k() {
        assert_eq!(dimension(IrrepLabel::new(0, 0)), 1);
        assert_eq!(k_of(IrrepLabel::new(0, 0)), 1.5);
        assert_eq!(dimension(IrrepLabel::new(1, 1)), 8);
        assert_eq!(dimension(IrrepLabel::new(2, 1)), 15);
        for p in 0..=5 {
            for q in 0..=5 {
                let l = IrrepLabel::new(p, q);
                let ws = l.weights();
                assert_eq!(ws.len() as u64, l.dimension());
                assert!(ws.iter().all(|w| w.is_valid(l)));
            }
        }
    }

    #[test]
    fn weight_validity() {
        let l = IrrepLabel::new(1, 0);
        assert_eq!(WeightLabel::new(1, 1, 1).rs(l).unwrap(), (1, 0));
        assert!(WeightLabel::new(1, 1, 0).rs(l).is_err());
        assert!(WeightLabel::new(1, 3, 1).rs(l).is_err());
        assert!(WeightLabel::new(0, 0, -2).is_valid(l));
        assert_eq!(format!("{}", WeightLabel::new(1, -1, 1)), "I=1/2,M=-1/2,Y=1/3");
    }

    #[test]
    fn top_weight_coincides_with_highest_weight_state() {
        let s = build_space(6, 4).unwrap();
        let l = IrrepLabel::new(1, 0);
        let c = canonical_state(&s, l, WeightLabel::new(1, 1, 1), 0).unwrap();
        assert!(c.sub(&highest_weight_state(&s, l).unwrap()).unwrap().norm() < 1e-15);
        for (p, q) in [(0, 0), (1, 1), (2, 1), (0, 3)] {
            let l = IrrepLabel::new(p, q);
            let c = canonical_state(&s, l, l.highest_weight(), 0).unwrap();
            let h = highest_weight_state(&s, l).unwrap();
            assert!((inner(&h, &c).unwrap().norm() - 1.0).abs() < 1e-13, "{l}");
        }
    }

    #[test]
    fn scalar_state_matches_canonical() {
        let s = build_space(6, 7).unwrap();
        for (p, q) in [(1, 0), (0, 1), (1, 1), (2, 1), (2, 2), (3, 1)] {
            let l = IrrepLabel::new(p, q);
            for rho in 0..=((7 - p - q) / 2) {
                let a = su2_scalar_state(&s, l, rho).unwrap();
                let b = canonical_state(&s, l, l.su2_scalar_weight(), rho).unwrap();
                assert!((a.norm() - 1.0).abs() < 1e-13);
                assert!(a.sub(&b).unwrap().norm() < 1e-13, "{l} rho={rho}");
            }
        }
        let a = su2_scalar_state(&s, IrrepLabel::new(1, 0), 0).unwrap();
        let i = s.index(&Occupation::new(&[0, 0, 1, 0, 0, 0])).unwrap();
        assert!((a.amplitudes()[i] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn eigenvalues_and_orthonormality() {
        let s = build_space(6, 6).unwrap();
        let g = su3_generators(&s).unwrap();
        let sp = sp2r_generators(&s).unwrap();
        let i2 = g.isospin_squared().unwrap();
        let y = g.hypercharge();
        let cas = g.casimir().unwrap();
        for l in irreps_up_to(4) {
            for rho in 0..=((6 - l.p - l.q) / 2) {
                let states: Vec<StateVector> =
                    l.weights().iter().map(|&w| canonical_state(&s, l, w, rho).unwrap()).collect();
                for (w, psi) in l.weights().iter().zip(&states) {
                    let ev = |op: &crate::fock::LinearOperator, v: f64| {
                        op.apply(psi).unwrap().sub(&psi.clone().scaled(C64::new(v, 0.0))).unwrap().norm()
                    };
                    let iso = w.isospin();
                    assert!(ev(&i2, iso * (iso + 1.0)) < 1e-10);
                    assert!(ev(&g.q[2], w.m()) < 1e-10);
                    assert!(ev(&y, w.y()) < 1e-10);
                    assert!(ev(&cas, l.casimir()) < 1e-10);
                    assert!(ev(&sp.j0, l.k() + rho as f64) < 1e-10);
                }
                for a in 0..states.len() {
                    for b in 0..states.len() {
                        let want = if a == b { 1.0 } else { 0.0 };
                        assert!((inner(&states[a], &states[b]).unwrap() - want).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn lowest_states_are_annihilated() {
        let s = build_space(6, 5).unwrap();
        for l in irreps_up_to(4) {
            for w in l.weights() {
                let c = canonical_state(&s, l, w, 0).unwrap();
                assert!(apply_k_minus(&c).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ladder_consistency() {
        let s = build_space(6, 8).unwrap();
        let l = IrrepLabel::new(2, 1);
        for w in l.weights() {
            for rho in 0..2 {
                let lower = canonical_state(&s, l, w, rho).unwrap();
                let upper = canonical_state(&s, l, w, rho + 1).unwrap();
                let raised = apply_k_plus(&lower).unwrap().normalized();
                assert!(crate::fock::infidelity(&raised, &upper).unwrap() < 1e-12);
                assert!((inner(&raised, &upper).unwrap() - 1.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn grade_sectors_complete() {
        let s = build_space(6, 6).unwrap();
        for n in 0..=6 {
            let r = grade_completeness(&s, n).unwrap();
            assert!(r.passed(1e-10), "{r:?}");
        }
    }

    #[test]
    fn kappa_coefficients() {
        let c = sp_kappa_coefficients(3, ZERO, 5).unwrap();
        assert_eq!(c[0], C64::new(1.0, 0.0));
        assert!(c[1..].iter().all(|x| *x == ZERO));
        let c = sp_kappa_coefficients(3, C64::new(1.0, 0.0), 40).unwrap();
        let total: f64 = c.iter().map(|x| x.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let (k1, k2) = (C64::new(0.3, -0.4), C64::new(0.7, 0.2));
        let a = sp_kappa_coefficients(4, k1, 60).unwrap();
        let b = sp_kappa_coefficients(4, k2, 60).unwrap();
        let o: C64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        let f = |z: C64| crate::specfun::hyp0f1_complex(4.0, z).unwrap();
        let want = f(k1.conj() * k2) / (f(C64::new(k1.norm_sqr(), 0.0)) * f(C64::new(k2.norm_sqr(), 0.0))).sqrt();
        assert!((o - want).norm() < 1e-13);
        let tail = sp_kappa_tail(3, 1.0, 3).unwrap();
        let head: f64 = sp_kappa_coefficients(3, C64::new(1.0, 0.0), 3).unwrap().iter().map(|x| x.norm_sqr()).sum();
        assert!((head + tail - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kappa_state_is_eigenvector() {
        let s = build_space(6, 20).unwrap();
        let l = IrrepLabel::new(0, 0);
        let kappa = C64::new(1.0, 0.0);
        let t = kappa_state(&s, l, l.highest_weight(), kappa, 1e-8).unwrap();
        let km = apply_k_minus(&t.state).unwrap();
        // only the top-grade component fails the eigen-relation: K₋ψ − κψ = −κ c_ρmax |k+ρmax⟩
        let residual = km.sub(&t.state.clone().scaled(kappa)).unwrap().norm();
        let top = sp_kappa_coefficients(l.k2(), kappa, 10).unwrap()[10].norm();
        assert!((residual - top).abs() < 1e-14 && residual < 1e-7);
        assert!((t.state.norm_sqr() + t.tail - 1.0).abs() < 1e-13);
        let s0 = build_space(6, 5).unwrap();
        let l = IrrepLabel::new(1, 1);
        for w in l.weights() {
            let z = kappa_state(&s0, l, w, ZERO, 0.0).unwrap();
            assert!(z.state.sub(&canonical_state(&s0, l, w, 0).unwrap()).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn kappa_states_orthonormal_at_fixed_kappa() {
        let s = build_space(6, 14).unwrap();
        let l = IrrepLabel::new(1, 1);
        let states = irrep_kappa_states(&s, l, C64::new(0.5, 0.3), 1e-8).unwrap();
        for a in 0..states.len() {
            for b in 0..states.len() {
                let want = if a == b { 1.0 } else { 0.0 };
                let g = inner(&states[a].state, &states[b].state).unwrap();
                assert!((g - want).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn tail_budget_error() {
        let s = build_space(6, 4).unwrap();
        let l = IrrepLabel::new(0, 0);
        assert!(matches!(
            kappa_state(&s, l, l.highest_weight(), C64::new(3.0, 0.0), 1e-8),
            Err(Error::TailBudget { .. })
        ));
    }

    #[test]
    fn errors() {
        let s = build_space(6, 2).unwrap();
        let l = IrrepLabel::new(2, 1);
        assert!(matches!(highest_weight_state(&s, l), Err(Error::CutoffExceeded { .. })));
        let l = IrrepLabel::new(1, 1);
        assert!(matches!(canonical_state(&s, l, l.highest_weight(), 1), Err(Error::CutoffExceeded { .. })));
        assert!(matches!(canonical_state(&s, l, WeightLabel::new(2, 0, 1), 0), Err(Error::InvalidWeight { .. })));
        let psi = StateVector::basis(&s, s.index(&Occupation::new(&[1, 0, 0, 1, 0, 0])).unwrap());
        assert!(matches!(induced_wavefunction(&psi, &[C64::new(1.0, 0.0), ZERO, ZERO]), Err(Error::NotInNullSpace(_))));
    }

    #[test]
    fn induced_wavefunction_values() {
        let s = build_space(6, 5).unwrap();
        let xi = [C64::new(0.6, 0.1), C64::new(-0.2, 0.5), C64::new(0.3, -0.4)];
        let n = xi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let xi = xi.map(|z| z / n);
        let vac = StateVector::vacuum(&s);
        assert!((induced_wavefunction(&vac, &xi).unwrap() - 2f64.sqrt()).norm() < 1e-15);
        let l = IrrepLabel::new(2, 1);
        let h = highest_weight_state(&s, l).unwrap();
        let want = (factorial(5) / 2.0).sqrt() * xi[0].powu(2) * xi[1].conj();
        assert!((induced_wavefunction(&h, &xi).unwrap() - want).norm() < 1e-13);
    }
}
