//! SU(2)/SU(3) group elements, the (η,ζ) chart of SU(3), Haar sampling, and the
//! representation operators U(A) on Fock sectors.

use std::sync::Arc;

use nalgebra::{DMatrix, Matrix2, Matrix3, Vector3};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{build_space, FockSpace, LinearOperator, Occupation, StateVector};
use crate::mc::{self, McEstimate};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub const EPS_CHART: f64 = 1e-10;

/// A 3×3 special unitary matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su3Element(pub Matrix3<C64>);

/// Chart coordinates: η ∈ S⁵ (first column of A) and ζ ∈ S³.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su3Chart {
    pub eta: Vector3<C64>,
    pub zeta: [C64; 2],
}

/// A 2×2 special unitary matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Element(pub Matrix2<C64>);

impl Su3Element {
    pub fn identity() -> Su3Element {
        Su3Element(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    /// Largest deviation of A†A from 1 and of det A from 1.
    pub fn unitarity_defect(&self) -> (f64, f64) {
        let u = (self.0.adjoint() * self.0 - Matrix3::identity()).camax();
        let d = (self.0.determinant() - ONE).norm();
        (u, d)
    }

    /// Accepts a matrix as an SU(3) element if it is unitary and unimodular
    /// to the given tolerance.
    pub fn try_new(m: Matrix3<C64>, tol: f64) -> Result<Su3Element> {
        let e = Su3Element(m);
        let (u, d) = e.unitarity_defect();
        if u > tol || d > tol {
            return Err(Error::Domain(format!("not in SU(3): unitarity {u:.2e}, det {d:.2e}")));
        }
        Ok(e)
    }

    pub fn mul(&self, other: &Su3Element) -> Su3Element {
        Su3Element(self.0 * other.0)
    }

    pub fn inverse(&self) -> Su3Element {
        Su3Element(self.0.adjoint())
    }

    pub fn conj(&self) -> Su3Element {
        Su3Element(self.0.map(|x| x.conj()))
    }

    pub fn transpose(&self) -> Su3Element {
        Su3Element(self.0.transpose())
    }

    pub fn act(&self, v: &[C64; 3]) -> [C64; 3] {
        let r = self.0 * Vector3::new(v[0], v[1], v[2]);
        [r[0], r[1], r[2]]
    }

    pub fn act_conj(&self, v: &[C64; 3]) -> [C64; 3] {
        self.conj().act(v)
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_iterator(3, 3, self.0.iter().copied())
    }
}

impl Su2Element {
    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_iterator(2, 2, self.0.iter().copied())
    }

    /// Rotation R_ij = ½ Tr(σ_i A σ_j A†) of the adjoint action.
    pub fn rotation(&self) -> [[f64; 3]; 3] {
        let s = pauli();
        let a = self.0;
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = 0.5 * (s[i] * a * s[j] * a.adjoint()).trace().re;
            }
        }
        r
    }
}

pub fn pauli() -> [Matrix2<C64>; 3] {
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -i, i, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// A = A₃(η) A₂(ζ) with the explicit chart matrices.
pub fn su3_from_chart(chart: &Su3Chart) -> Result<Su3Element> {
    let [e1, e2, e3] = [chart.eta[0], chart.eta[1], chart.eta[2]];
    if e1.norm() >= 1.0 - EPS_CHART {
        return Err(Error::ChartSingular(e1.norm()));
    }
    let rho = (1.0 - e1.norm_sqr()).sqrt();
    let r = C64::new(rho, 0.0);
    let a3 = Matrix3::new(
        e1,
        r,
        ZERO,
        e2,
        -e2 * e1.conj() / rho,
        e3.conj() / rho,
        e3,
        -e3 * e1.conj() / rho,
        -e2.conj() / rho,
    );
    let [z2, z3] = chart.zeta;
    let a2 = Matrix3::new(ONE, ZERO, ZERO, ZERO, z2, -z3.conj(), ZERO, z3, z2.conj());
    Ok(Su3Element(a3 * a2))
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform point on the unit sphere of Cⁿ (normalized complex Gaussian).
pub fn uniform_complex_sphere<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Chart coordinates drawn from the normalized invariant measure.
pub fn haar_sample_chart<R: Rng + ?Sized>(rng: &mut R) -> Su3Chart {
    loop {
        let eta = uniform_complex_sphere(rng, 3);
        if eta[0].norm() >= 1.0 - EPS_CHART {
            continue;
        }
        let zeta = uniform_complex_sphere(rng, 2);
        return Su3Chart { eta: Vector3::new(eta[0], eta[1], eta[2]), zeta: [zeta[0], zeta[1]] };
    }
}

pub fn haar_sample_su3<R: Rng + ?Sized>(rng: &mut R) -> Su3Element {
    su3_from_chart(&haar_sample_chart(rng)).expect("sampled chart is regular")
}

/// A(θ,φ) = exp(−iφσ₃/2) exp(−iθσ₂/2).
pub fn su2_section(theta: f64, phi: f64) -> Su2Element {
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let e = C64::from_polar(1.0, -0.5 * phi);
    Su2Element(Matrix2::new(e * c, -e * s, e.conj() * s, e.conj() * c))
}

/// Unit vector n̂(θ,φ).
pub fn unit_vector(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Matrix of the degree-N symmetric power of an n×n matrix M on the
/// orthonormal monomial basis Π (x_i)^{m_i}/√(m_i!), ordered like grade N of an
/// n-mode FockSpace: ⟨m|S|n⟩ = √(m!/n!)·[x^m] Π_j (Σ_i M_ij x_i)^{n_j}.
pub struct SymmetricPowers {
    monomials: Arc<FockSpace>,
    /// successor[d][μ][i] = rank in grade d+1 of monomial μ (grade d) times x_i
    successor: Vec<Vec<Vec<usize>>>,
}

impl SymmetricPowers {
    pub fn new(n_vars: usize, max_degree: usize) -> Result<SymmetricPowers> {
        let monomials = build_space(n_vars, max_degree + 1)?;
        let mut successor = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let r = monomials.grade_range(d);
            let next = monomials.grade_range(d + 1).start;
            let rows = r
                .map(|g| {
                    let occ = monomials.occupation(g);
                    (0..n_vars).map(|i| monomials.index(&occ.shifted(i, 1).unwrap()).unwrap() - next).collect()
                })
                .collect();
            successor.push(rows);
        }
        Ok(SymmetricPowers { monomials, successor })
    }

    pub fn n_vars(&self) -> usize {
        self.monomials.modes()
    }

    pub fn max_degree(&self) -> usize {
        self.successor.len() - 1
    }

    pub fn degree_dim(&self, d: usize) -> usize {
        self.monomials.grade_range(d).len()
    }

    /// Rank of a monomial within its degree.
    pub fn rank(&self, counts: &[u16]) -> usize {
        let occ = Occupation::new(counts);
        self.monomials.index(&occ).unwrap() - self.monomials.grade_range(occ.total()).start
    }

    pub fn monomial(&self, degree: usize, rank: usize) -> &Occupation {
        self.monomials.occupation(self.monomials.grade_range(degree).start + rank)
    }

    /// S^d(M) for every d ≤ max_degree.
    pub fn all(&self, m: &DMatrix<C64>) -> Vec<DMatrix<C64>> {
        let n = self.n_vars();
        assert_eq!(m.nrows(), n);
        let fact_sqrt = |o: &Occupation| -> f64 {
            o.counts().iter().map(|&c| crate::specfun::factorial(c as u64)).product::<f64>().sqrt()
        };
        let mut out = Vec::with_capacity(self.max_degree() + 1);
        out.push(DMatrix::from_element(1, 1, ONE));
        // unnormalized polynomials Π_j L_j^{n_j}, columns indexed by n
        let mut prev_poly: Vec<Vec<C64>> = vec![vec![ONE]];
        for d in 1..=self.max_degree() {
            let dim = self.degree_dim(d);
            let prev_dim = self.degree_dim(d - 1);
            let mut polys = Vec::with_capacity(dim);
            for col in 0..dim {
                let occ = self.monomial(d, col);
                let j = (0..n).find(|&j| occ.get(j) > 0).unwrap();
                let lower = occ.shifted(j, -1).unwrap();
                let base = &prev_poly[self.rank(lower.counts())];
                let mut poly = vec![ZERO; dim];
                for mu in 0..prev_dim {
                    if base[mu] == ZERO {
                        continue;
                    }
                    for i in 0..n {
                        poly[self.successor[d - 1][mu][i]] += base[mu] * m[(i, j)];
                    }
                }
                polys.push(poly);
            }
            let mut s = DMatrix::from_element(dim, dim, ZERO);
            let norms: Vec<f64> = (0..dim).map(|r| fact_sqrt(self.monomial(d, r))).collect();
            for col in 0..dim {
                for row in 0..dim {
                    s[(row, col)] = polys[col][row] * (norms[row] / norms[col]);
                }
            }
            out.push(s);
            prev_poly = polys;
        }
        out
    }
}

/// Layout of a six-mode space as (N_a, N_b) sectors; each sector's global
/// indices are stored row-major over (a-monomial rank, b-monomial rank).
pub struct SectorLayout {
    space: Arc<FockSpace>,
    powers: SymmetricPowers,
    sectors: Vec<Sector>,
}

#[derive(Clone, Debug)]
pub struct Sector {
    pub n_a: usize,
    pub n_b: usize,
    pub indices: Vec<usize>,
}

impl SectorLayout {
    pub fn new(space: &Arc<FockSpace>) -> Result<SectorLayout> {
        space.require_modes(6)?;
        let cutoff = space.cutoff();
        let powers = SymmetricPowers::new(3, cutoff)?;
        let mut sectors = Vec::new();
        for n_a in 0..=cutoff {
            for n_b in 0..=(cutoff - n_a) {
                let da = powers.degree_dim(n_a);
                let db = powers.degree_dim(n_b);
                let mut indices = Vec::with_capacity(da * db);
                for ra in 0..da {
                    let ma = *powers.monomial(n_a, ra);
                    for rb in 0..db {
                        let mb = *powers.monomial(n_b, rb);
                        let mut c = [0u16; 6];
                        c[..3].copy_from_slice(ma.counts());
                        c[3..].copy_from_slice(mb.counts());
                        indices.push(space.index(&Occupation::new(&c)).unwrap());
                    }
                }
                sectors.push(Sector { n_a, n_b, indices });
            }
        }
        Ok(SectorLayout { space: space.clone(), powers, sectors })
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    /// The representation operator U(A) in factored form.
    pub fn rep(self: &Arc<Self>, a: &Su3Element) -> RepOperator {
        let left = self.powers.all(&a.to_dmatrix());
        let right = self.powers.all(&a.conj().to_dmatrix());
        RepOperator { layout: self.clone(), left, right }
    }
}

/// U(A) on a six-mode space: on the (N_a, N_b) sector the amplitude block X
/// maps to S^{N_a}(A) X S^{N_b}(A*)ᵀ.
pub struct RepOperator {
    layout: Arc<SectorLayout>,
    left: Vec<DMatrix<C64>>,
    right: Vec<DMatrix<C64>>,
}

impl RepOperator {
    pub fn space(&self) -> &Arc<FockSpace> {
        &self.layout.space
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if !Arc::ptr_eq(psi.space(), &self.layout.space) {
            return Err(Error::SpaceMismatch);
        }
        let mut out = StateVector::zeros(&self.layout.space);
        let x = psi.amplitudes();
        for s in &self.layout.sectors {
            if s.indices.iter().all(|&i| x[i] == ZERO) {
                continue;
            }
            let (l, r) = (&self.left[s.n_a], &self.right[s.n_b]);
            let (da, db) = (l.nrows(), r.nrows());
            let block = DMatrix::from_fn(da, db, |i, j| x[s.indices[i * db + j]]);
            let y = l * block * r.transpose();
            let amps = out.amplitudes_mut();
            for i in 0..da {
                for j in 0..db {
                    amps[s.indices[i * db + j]] = y[(i, j)];
                }
            }
        }
        Ok(out)
    }

    /// Fully materialized sparse matrix (intended for small cutoffs).
    pub fn to_operator(&self) -> LinearOperator {
        let mut entries = Vec::new();
        for s in &self.layout.sectors {
            let (l, r) = (&self.left[s.n_a], &self.right[s.n_b]);
            let db = r.nrows();
            for (row, &gi) in s.indices.iter().enumerate() {
                let (ia, ib) = (row / db, row % db);
                for (col, &gj) in s.indices.iter().enumerate() {
                    let (ja, jb) = (col / db, col % db);
                    let v = l[(ia, ja)] * r[(ib, jb)];
                    if v != ZERO {
                        entries.push((gi, gj, v));
                    }
                }
            }
        }
        LinearOperator::from_triplets(&self.layout.space, entries)
    }
}

/// U(A) as an explicit sparse matrix on a six-mode space.
pub fn rep_operator(space: &Arc<FockSpace>, a: &Su3Element) -> Result<LinearOperator> {
    let layout = Arc::new(SectorLayout::new(space)?);
    Ok(layout.rep(a).to_operator())
}

/// U(A) for a space whose modes all transform with one n×n matrix (the U(2)
/// action on two modes, or U(1) on one): block S^N(M) on each grade N.
pub fn rep_operator_uniform(space: &Arc<FockSpace>, m: &DMatrix<C64>) -> Result<LinearOperator> {
    if m.nrows() != space.modes() {
        return Err(Error::ModeCount { expected: m.nrows(), found: space.modes() });
    }
    let powers = SymmetricPowers::new(space.modes(), space.cutoff())?;
    let mats = powers.all(m);
    let mut entries = Vec::new();
    for (d, s) in mats.iter().enumerate() {
        let start = space.grade_range(d).start;
        for r in 0..s.nrows() {
            for c in 0..s.ncols() {
                if s[(r, c)] != ZERO {
                    entries.push((start + r, start + c, s[(r, c)]));
                }
            }
        }
    }
    Ok(LinearOperator::from_triplets(space, entries))
}

/// Monte Carlo estimate of ∫dA U(A) ρ U(A)⁻¹ with ρ = Σ_i |ψ_i⟩⟨ψ_i|,
/// restricted to the (N_a, N_b) sectors where some ψ_i has support (the
/// average vanishes elsewhere).
#[derive(Clone, Debug, Serialize)]
pub struct HaarAverage {
    pub indices: Vec<usize>,
    /// Row-major real and imaginary parts of each entry.
    pub re: Vec<McEstimate>,
    pub im: Vec<McEstimate>,
    pub samples: usize,
    pub seed: u64,
}

impl HaarAverage {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn mean(&self, i: usize, j: usize) -> C64 {
        let k = i * self.dim() + j;
        C64::new(self.re[k].mean, self.im[k].mean)
    }

    /// Combined standard error √(σ_re² + σ_im²).
    pub fn std_error(&self, i: usize, j: usize) -> f64 {
        let k = i * self.dim() + j;
        self.re[k].std_error.hypot(self.im[k].std_error)
    }

    pub fn to_operator(&self, space: &Arc<FockSpace>) -> LinearOperator {
        let mut entries = Vec::new();
        for (a, &i) in self.indices.iter().enumerate() {
            for (b, &j) in self.indices.iter().enumerate() {
                entries.push((i, j, self.mean(a, b)));
            }
        }
        LinearOperator::from_triplets(space, entries)
    }
}

pub fn haar_average(layout: &Arc<SectorLayout>, states: &[StateVector], samples: usize, seed: u64) -> Result<HaarAverage> {
    let space = layout.space();
    for s in states {
        if !Arc::ptr_eq(s.space(), space) {
            return Err(Error::SpaceMismatch);
        }
    }
    let mut indices: Vec<usize> = layout
        .sectors()
        .iter()
        .filter(|sec| states.iter().any(|s| sec.indices.iter().any(|&i| s.amplitudes()[i] != ZERO)))
        .flat_map(|sec| sec.indices.iter().copied())
        .collect();
    indices.sort_unstable();
    let d = indices.len();
    let est = mc::estimate(seed, samples, 2 * d * d, |rng, out| {
        let a = haar_sample_su3(rng);
        let u = layout.rep(&a);
        out.iter_mut().for_each(|x| *x = 0.0);
        for s in states {
            let v = u.apply(s).expect("same space");
            let amps = v.amplitudes();
            for (r, &i) in indices.iter().enumerate() {
                for (c, &j) in indices.iter().enumerate() {
                    let z = amps[i] * amps[j].conj();
                    out[2 * (r * d + c)] += z.re;
                    out[2 * (r * d + c) + 1] += z.im;
                }
            }
        }
    });
    let re = est.iter().step_by(2).copied().collect();
    let im = est.iter().skip(1).step_by(2).copied().collect();
    Ok(HaarAverage { indices, re, im, samples, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::chunk_rng;

    #[test]
    fn chart_example() {
        let chart = Su3Chart { eta: Vector3::new(ZERO, ONE, ZERO), zeta: [ONE, ZERO] };
        let a = su3_from_chart(&chart).unwrap();
        let (u, d) = a.unitarity_defect();
        assert!(u < 1e-15 && d < 1e-15);
        assert_eq!(a.0.column(0).into_owned(), Vector3::new(ZERO, ONE, ZERO));
    }

    #[test]
    fn chart_singularity() {
        let chart = Su3Chart { eta: Vector3::new(ONE, ZERO, ZERO), zeta: [ONE, ZERO] };
        assert!(matches!(su3_from_chart(&chart), Err(Error::ChartSingular(_))));
    }

    #[test]
    fn samples_are_special_unitary_and_first_column_is_eta() {
        let mut rng = chunk_rng(1, 0);
        for _ in 0..200 {
            let c = haar_sample_chart(&mut rng);
            let a = su3_from_chart(&c).unwrap();
            let (u, d) = a.unitarity_defect();
            assert!(u < 1e-12 && d < 1e-12);
            assert!((a.0.column(0) - c.eta).camax() < 1e-14);
        }
    }

    #[test]
    fn su2_section_values() {
        let id = su2_section(0.0, 0.0);
        assert!((id.0 - Matrix2::identity()).camax() < 1e-15);
        let (t, p) = (1.1, 2.3);
        let a = su2_section(t, p);
        let col = a.0.column(0);
        assert!((col[0] - C64::from_polar((0.5 * t).cos(), -0.5 * p)).norm() < 1e-15);
        assert!((col[1] - C64::from_polar((0.5 * t).sin(), 0.5 * p)).norm() < 1e-15);
        let r = a.rotation();
        let n = unit_vector(t, p);
        for i in 0..3 {
            assert!((r[i][2] - n[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn symmetric_power_degree_one_is_matrix() {
        let mut rng = chunk_rng(2, 0);
        let a = haar_sample_su3(&mut rng);
        let p = SymmetricPowers::new(3, 3).unwrap();
        let s = p.all(&a.to_dmatrix());
        // grade-1 monomials in ascending lexicographic order: x3, x2, x1
        for r in 0..3 {
            for c in 0..3 {
                assert!((s[1][(r, c)] - a.0[(2 - r, 2 - c)]).norm() < 1e-15);
            }
        }
        for m in &s {
            let d = m.nrows();
            assert!((m.adjoint() * m - DMatrix::<C64>::identity(d, d)).camax() < 1e-12);
        }
    }
}
