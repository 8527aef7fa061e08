use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::space::{FockSpace, Occupation};
use crate::error::{Error, Result};
use crate::specfun::log_factorial;

/// Dense complex amplitude vector attached to a FockSpace.
#[derive(Clone, Debug)]
pub struct StateVector {
    space: Arc<FockSpace>,
    amps: Vec<C64>,
}

/// A state obtained by truncating an exact infinite expansion, with the
/// squared norm of the dropped part.
#[derive(Clone, Debug)]
pub struct Truncated {
    pub state: StateVector,
    pub tail: f64,
}

impl StateVector {
    pub fn zeros(space: &Arc<FockSpace>) -> StateVector {
        StateVector { space: space.clone(), amps: vec![C64::new(0.0, 0.0); space.dim()] }
    }

    pub fn from_amplitudes(space: &Arc<FockSpace>, amps: Vec<C64>) -> Result<StateVector> {
        if amps.len() != space.dim() {
            return Err(Error::SpaceMismatch);
        }
        Ok(StateVector { space: space.clone(), amps })
    }

    pub fn basis(space: &Arc<FockSpace>, i: usize) -> StateVector {
        let mut v = StateVector::zeros(space);
        v.amps[i] = C64::new(1.0, 0.0);
        v
    }

    pub fn vacuum(space: &Arc<FockSpace>) -> StateVector {
        StateVector::basis(space, 0)
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn amplitude(&self, occ: &Occupation) -> C64 {
        self.space.index(occ).map_or(C64::new(0.0, 0.0), |i| self.amps[i])
    }

    pub fn same_space(&self, other: &StateVector) -> bool {
        Arc::ptr_eq(&self.space, &other.space)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> StateVector {
        let n = self.norm();
        if n > 0.0 {
            self.scale_mut(C64::new(1.0 / n, 0.0));
        }
        self
    }

    pub fn scale_mut(&mut self, c: C64) {
        for a in &mut self.amps {
            *a *= c;
        }
    }

    pub fn scaled(mut self, c: C64) -> StateVector {
        self.scale_mut(c);
        self
    }

    /// self += c·x
    pub fn axpy(&mut self, c: C64, x: &StateVector) -> Result<()> {
        if !self.same_space(x) {
            return Err(Error::SpaceMismatch);
        }
        for (a, b) in self.amps.iter_mut().zip(&x.amps) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn sub(&self, x: &StateVector) -> Result<StateVector> {
        let mut r = self.clone();
        r.axpy(C64::new(-1.0, 0.0), x)?;
        Ok(r)
    }

    /// Indices with nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        (0..self.amps.len()).filter(|&i| self.amps[i] != C64::new(0.0, 0.0)).collect()
    }

    /// Squared norm carried by grades above `grade`.
    pub fn weight_above_grade(&self, grade: usize) -> f64 {
        let start = self.space.up_to_grade(grade).end;
        self.amps[start..].iter().map(|a| a.norm_sqr()).sum()
    }

    /// Columnar dump: index, occupation, re, im (tab separated), nonzero rows only.
    pub fn write_columns<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "index\toccupation\tre\tim")?;
        for (i, a) in self.amps.iter().enumerate() {
            if a.re != 0.0 || a.im != 0.0 {
                writeln!(out, "{}\t{}\t{:.17e}\t{:.17e}", i, self.space.occupation(i), a.re, a.im)?;
            }
        }
        Ok(())
    }
}

/// ⟨x|y⟩, conjugate-linear in x.
pub fn inner(x: &StateVector, y: &StateVector) -> Result<C64> {
    if !x.same_space(y) {
        return Err(Error::SpaceMismatch);
    }
    Ok(x.amps.iter().zip(&y.amps).map(|(a, b)| a.conj() * b).sum())
}

/// 1 − |⟨x|y⟩|²/(‖x‖²‖y‖²).
pub fn infidelity(x: &StateVector, y: &StateVector) -> Result<f64> {
    let o = inner(x, y)?;
    Ok(1.0 - o.norm_sqr() / (x.norm_sqr() * y.norm_sqr()))
}

/// Poisson tail Σ_{N>cutoff} e^{−s} s^N / N!, summed directly.
pub fn poisson_tail(s: f64, cutoff: usize) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let mut tail = 0.0;
    let mut n = cutoff + 1;
    loop {
        let t = (-s + n as f64 * s.ln() - log_factorial(n as u64)).exp();
        tail += t;
        if (n as f64) > s && t <= 1e-18 * tail.max(1e-300) {
            break;
        }
        if t == 0.0 && (n as f64) > s {
            break;
        }
        n += 1;
    }
    tail
}

/// Precomputed λ^n/√n! tables for evaluating coherent-state amplitudes.
pub struct CoherentAmplitudes {
    table: Vec<Vec<C64>>,
    prefactor: f64,
}

impl CoherentAmplitudes {
    pub fn new(labels: &[C64], max_count: usize) -> CoherentAmplitudes {
        let s: f64 = labels.iter().map(|l| l.norm_sqr()).sum();
        let table = labels
            .iter()
            .map(|&l| {
                let mut row = Vec::with_capacity(max_count + 1);
                let mut v = C64::new(1.0, 0.0);
                row.push(v);
                for n in 1..=max_count {
                    v *= l / (n as f64).sqrt();
                    row.push(v);
                }
                row
            })
            .collect();
        CoherentAmplitudes { table, prefactor: (-0.5 * s).exp() }
    }

    /// ⟨n|λ⟩ = e^{−½Σ|λ|²} Π λ_j^{n_j}/√(n_j!).
    pub fn amplitude(&self, occ: &Occupation) -> C64 {
        let mut a = C64::new(self.prefactor, 0.0);
        for (row, &n) in self.table.iter().zip(occ.counts()) {
            a *= row[n as usize];
        }
        a
    }
}

/// Truncated coherent state e^{−½Σ|λ|²} Π λ^n/√n! |n⟩ with its Poisson tail.
pub fn coherent_state(space: &Arc<FockSpace>, labels: &[C64], tail_tolerance: f64) -> Result<Truncated> {
    if labels.len() != space.modes() {
        return Err(Error::ModeCount { expected: space.modes(), found: labels.len() });
    }
    let s: f64 = labels.iter().map(|l| l.norm_sqr()).sum();
    let tail = poisson_tail(s, space.cutoff());
    if tail > tail_tolerance {
        return Err(Error::TailBudget { tail, tolerance: tail_tolerance });
    }
    let table = CoherentAmplitudes::new(labels, space.cutoff());
    let amps = space.occupations().iter().map(|o| table.amplitude(o)).collect();
    Ok(Truncated { state: StateVector { space: space.clone(), amps }, tail })
}

/// ⟨ψ|λ⟩ against the untruncated coherent state, summed over the support of ψ.
pub fn coherent_overlap(psi: &StateVector, labels: &[C64]) -> C64 {
    let space = psi.space();
    let table = CoherentAmplitudes::new(labels, space.cutoff());
    psi.amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
        .map(|(i, a)| a.conj() * table.amplitude(space.occupation(i)))
        .sum()
}

/// Nonzero amplitudes of a state with their occupations, for repeated
/// overlaps against coherent states.
#[derive(Clone, Debug)]
pub struct SparseState {
    entries: Vec<(Occupation, C64)>,
}

impl SparseState {
    pub fn new(psi: &StateVector) -> SparseState {
        let space = psi.space();
        let entries = psi
            .amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(|(i, &a)| (*space.occupation(i), a))
            .collect();
        SparseState { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// ⟨ψ|λ⟩ with the coherent amplitudes taken from `table`.
    pub fn coherent_overlap(&self, table: &CoherentAmplitudes) -> C64 {
        self.entries.iter().map(|(o, a)| a.conj() * table.amplitude(o)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_space;

    #[test]
    fn one_mode_coherent_vacuum_amplitude() {
        let s = build_space(1, 30).unwrap();
        let z = coherent_state(&s, &[C64::new(1.0, 0.0)], 1e-6).unwrap();
        assert!((z.state.amplitudes()[0].re - (-0.5f64).exp()).abs() < 1e-15);
        assert!((z.state.norm_sqr() - (1.0 - z.tail)).abs() < 1e-14);
    }

    #[test]
    fn tail_budget_violation() {
        let s = build_space(1, 5).unwrap();
        assert!(matches!(coherent_state(&s, &[C64::new(3.0, 0.0)], 1e-6), Err(Error::TailBudget { .. })));
    }

    #[test]
    fn inner_is_conjugate_linear() {
        let s = build_space(2, 3).unwrap();
        let x = StateVector::basis(&s, 1).scaled(C64::new(0.0, 2.0));
        let y = StateVector::basis(&s, 1);
        assert_eq!(inner(&x, &y).unwrap(), C64::new(0.0, -2.0));
        assert_eq!(inner(&StateVector::basis(&s, 2), &y).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn columnar_dump() {
        let s = build_space(2, 2).unwrap();
        let mut buf = Vec::new();
        StateVector::basis(&s, 4).write_columns(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("4\t1,1\t1.0"));
    }

    #[test]
    fn sparse_overlap_matches_dense() {
        let s = build_space(3, 6).unwrap();
        let amps = (0..s.dim()).map(|i| if i % 3 == 0 { C64::new(i as f64, 1.0) } else { C64::new(0.0, 0.0) }).collect();
        let psi = StateVector::from_amplitudes(&s, amps).unwrap();
        let labels = [C64::new(0.3, 0.1), C64::new(-0.2, 0.4), C64::new(0.5, 0.0)];
        let sparse = SparseState::new(&psi);
        assert_eq!(sparse.len(), psi.support().len());
        let a = sparse.coherent_overlap(&CoherentAmplitudes::new(&labels, 6));
        assert!((a - coherent_overlap(&psi, &labels)).norm() < 1e-13);
    }
}
