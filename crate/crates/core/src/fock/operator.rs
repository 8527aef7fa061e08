use std::io::{self, Write};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::space::{FockSpace, Occupation};
use super::state::StateVector;
use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Sparse complex matrix (CSR) in the basis ordering of a FockSpace. Because
/// the ordering is graded, rows of one total-quanta grade are contiguous.
#[derive(Clone, Debug)]
pub struct LinearOperator {
    space: Arc<FockSpace>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

impl LinearOperator {
    /// Builds from (row, col, value) entries; duplicates are summed.
    pub fn from_triplets(space: &Arc<FockSpace>, mut entries: Vec<(usize, usize, C64)>) -> LinearOperator {
        let n = space.dim();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<C64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        LinearOperator { space: space.clone(), row_ptr, cols, vals }.pruned()
    }

    fn pruned(mut self) -> LinearOperator {
        if self.vals.iter().all(|v| *v != ZERO) {
            return self;
        }
        let n = self.space.dim();
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(self.cols.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        for r in 0..n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.vals[k] != ZERO {
                    cols.push(self.cols[k]);
                    vals.push(self.vals[k]);
                }
            }
            row_ptr[r + 1] = cols.len();
        }
        self.row_ptr = row_ptr;
        self.cols = cols;
        self.vals = vals;
        self
    }

    /// Builds column by column from the image of each basis state.
    pub fn from_columns<F>(space: &Arc<FockSpace>, image: F) -> LinearOperator
    where
        F: Fn(usize, &Occupation, &mut Vec<(usize, C64)>),
    {
        let mut entries = Vec::new();
        let mut col = Vec::new();
        for j in 0..space.dim() {
            col.clear();
            image(j, space.occupation(j), &mut col);
            entries.extend(col.iter().map(|&(i, v)| (i, j, v)));
        }
        LinearOperator::from_triplets(space, entries)
    }

    pub fn zero(space: &Arc<FockSpace>) -> LinearOperator {
        LinearOperator::from_triplets(space, Vec::new())
    }

    pub fn identity(space: &Arc<FockSpace>) -> LinearOperator {
        LinearOperator::diagonal(space, |_| C64::new(1.0, 0.0))
    }

    pub fn diagonal<F: Fn(&Occupation) -> C64>(space: &Arc<FockSpace>, f: F) -> LinearOperator {
        let entries = (0..space.dim()).map(|i| (i, i, f(space.occupation(i)))).collect();
        LinearOperator::from_triplets(space, entries)
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Nonzero entries of row i as (col, value).
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    /// All nonzero entries as (row, col, value).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim()).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        match self.cols[lo..hi].binary_search(&j) {
            Ok(k) => self.vals[lo + k],
            Err(_) => ZERO,
        }
    }

    fn check(&self, other: &LinearOperator) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn apply_slice(&self, x: &[C64], y: &mut [C64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }

    pub fn apply(&self, x: &StateVector) -> Result<StateVector> {
        if !Arc::ptr_eq(&self.space, x.space()) {
            return Err(Error::SpaceMismatch);
        }
        let mut y = StateVector::zeros(&self.space);
        self.apply_slice(x.amplitudes(), y.amplitudes_mut());
        Ok(y)
    }

    /// Σ_i c_i · op_i over a common space.
    pub fn linear_combination(terms: &[(C64, &LinearOperator)]) -> Result<LinearOperator> {
        let first = terms.first().ok_or_else(|| Error::Domain("empty linear combination".into()))?;
        let space = first.1.space.clone();
        let mut entries = Vec::new();
        for (c, op) in terms {
            first.1.check(op)?;
            entries.extend(op.entries().map(|(r, col, v)| (r, col, c * v)));
        }
        Ok(LinearOperator::from_triplets(&space, entries))
    }

    pub fn add(&self, other: &LinearOperator) -> Result<LinearOperator> {
        LinearOperator::linear_combination(&[(C64::new(1.0, 0.0), self), (C64::new(1.0, 0.0), other)])
    }

    pub fn sub(&self, other: &LinearOperator) -> Result<LinearOperator> {
        LinearOperator::linear_combination(&[(C64::new(1.0, 0.0), self), (C64::new(-1.0, 0.0), other)])
    }

    pub fn scale(&self, c: C64) -> LinearOperator {
        let mut r = self.clone();
        for v in &mut r.vals {
            *v *= c;
        }
        r.pruned()
    }

    /// Matrix product self·other.
    pub fn matmul(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.check(other)?;
        let n = self.dim();
        let mut acc = vec![ZERO; n];
        let mut mark = vec![usize::MAX; n];
        let mut touched = Vec::new();
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for r in 0..n {
            touched.clear();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if mark[c] != r {
                        mark[c] = r;
                        acc[c] = ZERO;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                if acc[c] != ZERO {
                    cols.push(c);
                    vals.push(acc[c]);
                }
            }
            row_ptr[r + 1] = cols.len();
        }
        Ok(LinearOperator { space: self.space.clone(), row_ptr, cols, vals })
    }

    /// [self, other] = self·other − other·self.
    pub fn commutator(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> LinearOperator {
        let entries = self.entries().map(|(r, c, v)| (c, r, v.conj())).collect();
        LinearOperator::from_triplets(&self.space, entries)
    }

    /// Largest |entry| whose column lies in a grade ≤ max_col_grade.
    pub fn max_abs_on_columns(&self, max_col_grade: usize) -> f64 {
        let limit = self.space.up_to_grade(max_col_grade).end;
        self.entries().filter(|&(_, c, _)| c < limit).map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |entry| overall.
    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Dense submatrix on the given basis indices (rows and columns).
    pub fn restrict(&self, indices: &[usize]) -> DMatrix<C64> {
        let mut pos = vec![usize::MAX; self.dim()];
        for (k, &i) in indices.iter().enumerate() {
            pos[i] = k;
        }
        let mut m = DMatrix::from_element(indices.len(), indices.len(), ZERO);
        for (k, &i) in indices.iter().enumerate() {
            for (c, v) in self.row(i) {
                if pos[c] != usize::MAX {
                    m[(k, pos[c])] = v;
                }
            }
        }
        m
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let idx: Vec<usize> = (0..self.dim()).collect();
        self.restrict(&idx)
    }

    /// Columnar dump: row, col, re, im.
    pub fn write_columns<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "row\tcol\tre\tim")?;
        for (r, c, v) in self.entries() {
            writeln!(out, "{}\t{}\t{:.17e}\t{:.17e}", r, c, v.re, v.im)?;
        }
        Ok(())
    }
}

/// Creation or annihilation operator for one mode. Creation entries that would
/// leave the cutoff are dropped.
pub fn ladder(space: &Arc<FockSpace>, mode: usize, kind: Ladder) -> Result<LinearOperator> {
    if mode >= space.modes() {
        return Err(Error::Domain(format!("mode {mode} out of range for {} modes", space.modes())));
    }
    let delta = if kind == Ladder::Create { 1 } else { -1 };
    Ok(LinearOperator::from_columns(space, |_, occ, out| {
        let n = occ.get(mode) as f64;
        if let Some(t) = occ.shifted(mode, delta) {
            if let Some(i) = space.index(&t) {
                let amp = if delta > 0 { (n + 1.0).sqrt() } else { n.sqrt() };
                out.push((i, C64::new(amp, 0.0)));
            }
        }
    }))
}

/// Σ_{ij} c_ij a_i† a_j (grade preserving, exact at any cutoff).
pub fn bilinear(space: &Arc<FockSpace>, coeffs: &[(usize, usize, C64)]) -> LinearOperator {
    LinearOperator::from_columns(space, |_, occ, out| {
        for &(i, j, c) in coeffs {
            if c == ZERO || occ.get(j) == 0 {
                continue;
            }
            let nj = occ.get(j) as f64;
            let mid = occ.shifted(j, -1).unwrap();
            let ni = mid.get(i) as f64;
            let t = mid.shifted(i, 1).unwrap();
            let idx = space.index(&t).expect("grade preserved");
            out.push((idx, c * (nj * (ni + 1.0)).sqrt()));
        }
    })
}

/// Σ c_ij a_i† a_j† (raises grade by 2; entries beyond the cutoff dropped).
pub fn pair_creation(space: &Arc<FockSpace>, coeffs: &[(usize, usize, C64)]) -> LinearOperator {
    LinearOperator::from_columns(space, |_, occ, out| {
        for &(i, j, c) in coeffs {
            let nj = occ.get(j) as f64;
            let mid = occ.shifted(j, 1).unwrap();
            let ni = mid.get(i) as f64;
            let t = mid.shifted(i, 1).unwrap();
            if let Some(idx) = space.index(&t) {
                out.push((idx, c * ((nj + 1.0) * (ni + 1.0)).sqrt()));
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_space;

    #[test]
    fn ladder_matrix_elements() {
        let s = build_space(1, 4).unwrap();
        let ad = ladder(&s, 0, Ladder::Create).unwrap();
        let a = ladder(&s, 0, Ladder::Annihilate).unwrap();
        assert!((ad.get(2, 1).re - 2f64.sqrt()).abs() < 1e-15);
        let v = a.apply(&StateVector::vacuum(&s)).unwrap();
        assert_eq!(v.norm(), 0.0);
        assert_eq!(ad.adjoint().to_dense(), a.to_dense());
    }

    #[test]
    fn canonical_commutator_interior() {
        let s = build_space(2, 6).unwrap();
        for m in 0..2 {
            let a = ladder(&s, m, Ladder::Annihilate).unwrap();
            let ad = ladder(&s, m, Ladder::Create).unwrap();
            let c = a.commutator(&ad).unwrap().sub(&LinearOperator::identity(&s)).unwrap();
            assert!(c.max_abs_on_columns(5) < 1e-14);
            // the boundary grade is where truncation shows
            assert!(c.max_abs_on_columns(6) > 0.5);
        }
    }

    #[test]
    fn bilinear_matches_ladder_product() {
        let s = build_space(3, 5).unwrap();
        let c = C64::new(0.3, -0.7);
        let direct = bilinear(&s, &[(0, 2, c)]);
        let prod = ladder(&s, 0, Ladder::Create)
            .unwrap()
            .matmul(&ladder(&s, 2, Ladder::Annihilate).unwrap())
            .unwrap()
            .scale(c);
        assert!(direct.sub(&prod).unwrap().max_abs() < 1e-14);
        let pc = pair_creation(&s, &[(0, 1, c)]);
        let prod = ladder(&s, 0, Ladder::Create)
            .unwrap()
            .matmul(&ladder(&s, 1, Ladder::Create).unwrap())
            .unwrap()
            .scale(c);
        assert!(pc.sub(&prod).unwrap().max_abs() < 1e-14);
    }
}
