use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_MODES: usize = 6;
/// Default bound on the number of basis states a space may enumerate.
pub const DEFAULT_MAX_DIM: usize = 4_000_000;

/// Occupation numbers of up to six bosonic modes. For the SU(3) oscillators
/// the order is a1, a2, a3, b1, b2, b3.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Occupation {
    counts: [u16; MAX_MODES],
    modes: u8,
}

impl Occupation {
    pub fn new(counts: &[u16]) -> Occupation {
        assert!(counts.len() <= MAX_MODES && !counts.is_empty(), "1..=6 modes supported");
        let mut c = [0u16; MAX_MODES];
        c[..counts.len()].copy_from_slice(counts);
        Occupation { counts: c, modes: counts.len() as u8 }
    }

    pub fn vacuum(modes: usize) -> Occupation {
        Occupation::new(&vec![0; modes])
    }

    pub fn counts(&self) -> &[u16] {
        &self.counts[..self.modes as usize]
    }

    pub fn modes(&self) -> usize {
        self.modes as usize
    }

    pub fn get(&self, mode: usize) -> u16 {
        self.counts()[mode]
    }

    pub fn total(&self) -> usize {
        self.counts().iter().map(|&c| c as usize).sum()
    }

    /// Copy with `mode` shifted by `delta`; None if it would go negative.
    pub fn shifted(&self, mode: usize, delta: i32) -> Option<Occupation> {
        let n = self.counts[mode] as i32 + delta;
        if n < 0 {
            return None;
        }
        let mut o = *self;
        o.counts[mode] = n as u16;
        Some(o)
    }

    /// (N_a, N_b) for a six-mode occupation.
    pub fn ab_totals(&self) -> (usize, usize) {
        let c = self.counts();
        let na = c[..3].iter().map(|&x| x as usize).sum();
        let nb = c[3..].iter().map(|&x| x as usize).sum();
        (na, nb)
    }
}

impl fmt::Debug for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.counts())
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.counts().iter().map(|c| c.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Number of ways to write n as an ordered sum of r nonnegative parts.
fn compositions(table: &[Vec<usize>], n: usize, r: usize) -> usize {
    if r == 0 {
        return usize::from(n == 0);
    }
    table[n + r - 1][r - 1]
}

/// Truncated Fock space: all occupations with total quanta ≤ cutoff, ordered
/// by total, then lexicographically (ascending) in the count tuple.
pub struct FockSpace {
    modes: usize,
    cutoff: usize,
    states: Vec<Occupation>,
    grade_offsets: Vec<usize>,
    binom: Vec<Vec<usize>>,
}

impl fmt::Debug for FockSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FockSpace(modes={}, cutoff={}, dim={})", self.modes, self.cutoff, self.dim())
    }
}

pub fn build_space(modes: usize, cutoff: usize) -> Result<Arc<FockSpace>> {
    build_space_bounded(modes, cutoff, DEFAULT_MAX_DIM)
}

pub fn build_space_bounded(modes: usize, cutoff: usize, max_dim: usize) -> Result<Arc<FockSpace>> {
    if modes == 0 || modes > MAX_MODES {
        return Err(Error::Domain(format!("mode count {modes} not in 1..=6")));
    }
    let n = cutoff + modes + 1;
    let mut binom = vec![vec![0usize; modes + 1]; n + 1];
    for (i, row) in binom.iter_mut().enumerate() {
        row[0] = 1;
        for k in 1..=modes.min(i) {
            // C(i,k) computed incrementally; fits easily for these sizes
            row[k] = row[k - 1] * (i - k + 1) / k;
        }
    }
    let dim = binom[cutoff + modes][modes];
    if dim > max_dim {
        return Err(Error::Resource { dim, bound: max_dim });
    }
    let mut states = Vec::with_capacity(dim);
    let mut grade_offsets = Vec::with_capacity(cutoff + 2);
    let mut buf = vec![0u16; modes];
    for grade in 0..=cutoff {
        grade_offsets.push(states.len());
        enumerate(&mut buf, 0, grade, &mut states);
    }
    grade_offsets.push(states.len());
    debug_assert_eq!(states.len(), dim);
    Ok(Arc::new(FockSpace { modes, cutoff, states, grade_offsets, binom }))
}

fn enumerate(buf: &mut [u16], pos: usize, remaining: usize, out: &mut Vec<Occupation>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining as u16;
        out.push(Occupation::new(buf));
        return;
    }
    for v in 0..=remaining {
        buf[pos] = v as u16;
        enumerate(buf, pos + 1, remaining - v, out);
    }
}

impl FockSpace {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn occupation(&self, i: usize) -> &Occupation {
        &self.states[i]
    }

    pub fn occupations(&self) -> &[Occupation] {
        &self.states
    }

    /// Dense index of an occupation, or None when outside the cutoff.
    pub fn index(&self, occ: &Occupation) -> Option<usize> {
        if occ.modes() != self.modes {
            return None;
        }
        let total = occ.total();
        if total > self.cutoff {
            return None;
        }
        let c = occ.counts();
        let mut rank = 0;
        let mut rem = total;
        for (i, &ci) in c.iter().enumerate().take(self.modes - 1) {
            let after = self.modes - i - 1;
            for v in 0..ci as usize {
                rank += compositions(&self.binom, rem - v, after);
            }
            rem -= ci as usize;
        }
        Some(self.grade_offsets[total] + rank)
    }

    /// Total quanta of basis state i.
    pub fn grade(&self, i: usize) -> usize {
        self.states[i].total()
    }

    /// Index range of basis states with total quanta `grade`.
    pub fn grade_range(&self, grade: usize) -> Range<usize> {
        if grade > self.cutoff {
            return self.dim()..self.dim();
        }
        self.grade_offsets[grade]..self.grade_offsets[grade + 1]
    }

    /// Indices of all states with total quanta ≤ max_grade.
    pub fn up_to_grade(&self, max_grade: usize) -> Range<usize> {
        0..self.grade_offsets[(max_grade + 1).min(self.cutoff + 1)]
    }

    pub fn require_modes(&self, expected: usize) -> Result<()> {
        if self.modes == expected {
            Ok(())
        } else {
            Err(Error::ModeCount { expected, found: self.modes })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(build_space(1, 5).unwrap().dim(), 6);
        assert_eq!(build_space(2, 3).unwrap().dim(), 10);
        assert_eq!(build_space(6, 8).unwrap().dim(), 3003);
        assert_eq!(build_space(6, 12).unwrap().dim(), 18564);
    }

    #[test]
    fn index_is_inverse_of_enumeration() {
        for modes in [1, 2, 3, 6] {
            let s = build_space(modes, 7).unwrap();
            for i in 0..s.dim() {
                assert_eq!(s.index(s.occupation(i)), Some(i));
            }
        }
    }

    #[test]
    fn ordering_is_graded_lexicographic() {
        let s = build_space(2, 2).unwrap();
        let got: Vec<Vec<u16>> = s.occupations().iter().map(|o| o.counts().to_vec()).collect();
        let want = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]];
        assert_eq!(got, want);
    }

    #[test]
    fn outside_cutoff_has_no_index() {
        let s = build_space(2, 3).unwrap();
        assert_eq!(s.index(&Occupation::new(&[2, 2])), None);
        assert_eq!(s.index(&Occupation::new(&[1, 1, 1])), None);
    }

    #[test]
    fn resource_bound() {
        assert!(matches!(build_space_bounded(6, 12, 1000), Err(Error::Resource { .. })));
        assert!(build_space(7, 1).is_err());
    }
}
