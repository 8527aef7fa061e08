//! Static metadata: every check group with its paper anchor and a one-line description.

use crate::config::Suite;

pub struct Entry {
    pub suite: Suite,
    pub group: &'static str,
    pub anchor: &'static str,
    pub description: &'static str,
}

const fn e(suite: Suite, group: &'static str, anchor: &'static str, description: &'static str) -> Entry {
    Entry { suite, group, anchor, description }
}

use Suite::*;

pub const CATALOG: &[Entry] = &[
    e(Algebra, "gell-mann", "Eq. 2", "structure constants of the Gell-Mann matrices: f123 = 1, f458 = f678 = sqrt(3)/2"),
    e(Algebra, "su3-commutators", "Eq. 2", "[Q_a, Q_b] = i f_abc Q_c for the six-oscillator generators"),
    e(Algebra, "sp2r-definitions", "Eq. 5a", "J0 = (N + 3)/2 and K1, K2 hermitian on interior grades"),
    e(Algebra, "sp2r-commutators", "Eq. 5b", "[J0, K1] = iK2, [J0, K2] = -iK1, [K1, K2] = -iJ0, [K-, K+] = 2J0"),
    e(Algebra, "mutual-commutation", "Eq. 6", "every Sp(2,R) generator and N commute with every Q_a"),
    e(Algebra, "casimir", "Eqs. 6, 9", "quadratic Casimir is (p^2+q^2+pq+3p+3q)/3 on every canonical state, for all rho"),
    e(Algebra, "su2-commutators", "Eqs. 41, 42", "two-mode Schwinger generators: [J_j, J_k] = i eps_jkl J_l, [J_j, N] = 0"),
    e(Lowdim, "klauder-1dof", "Eqs. 26, 30", "f = 1 gives unit coefficients (quadrature) and Gaussian Monte Carlo of the one-mode identity"),
    e(Lowdim, "shell-1dof", "Eqs. 27, 31", "circle coefficients e^{-r0^2} r0^{2n}/n! against the angular average of |<n|r0 e^{i theta}>|^2"),
    e(Lowdim, "displaced-number-shell", "Eqs. 36, 37", "Laguerre coefficients for fiducial |n0> against the angular average of |<n|D(z)|n0>|^2"),
    e(Lowdim, "su2-section", "Eq. 51", "A(theta, phi) maps (1,0) to (e^{-i phi/2} cos theta/2, e^{i phi/2} sin theta/2)"),
    e(Lowdim, "su2-scs-overlap", "Eqs. 53, 54a", "closed-form SU(2) coherent-state overlap against Fock inner products"),
    e(Lowdim, "su2-expansion", "Eq. 55", "H-W coherent state of two modes rebuilt from SU(2) coherent states"),
    e(Lowdim, "schur-s2", "Eq. 57", "sphere average of |j,n><j,n| equals P_j/(2j+1)"),
    e(Lowdim, "klauder-2dof", "Eqs. 59, 62", "f = 1 gives unit spin coefficients (quadrature) and Gaussian Monte Carlo of the two-mode identity"),
    e(Lowdim, "shell-2dof", "Eq. 60", "shell coefficients e^{-r0^2} r0^{2(2j+1)}/(2j+1)! against the S^3 average"),
    e(Lowdim, "gcs-noncommutation", "Eq. 63", "shell frame with vacuum fiducial commutes with U(u); with fiducial |1,0> it does not"),
    e(Orbits, "classification-examples", "Eq. 79", "orbit classes a to e on the listed examples"),
    e(Orbits, "orbit-invariance", "Eqs. 76, 78", "class and (u, v, kappa) unchanged under 10 random SU(3) rotations of random labels"),
    e(Orbits, "representative-roundtrip", "Eqs. 79, 107, 121", "representative points reproduce the invariants of their orbit"),
    e(Orbits, "chart", "Eqs. 80, 81", "chart matrices are special unitary with first column eta"),
    e(Orbits, "haar-moments", "Eq. 82", "Haar moments: E[A] = 0, E[A_ij conj(A_kl)] = delta/3, E|Tr A|^2 = 1"),
    e(Orbits, "group-action", "Eqs. 76, 77", "U(A)|z,w> = |Az, A*w> on truncated coherent states"),
    e(Orbits, "jacobian", "Eq. 84", "(2/pi) int u^5 e^{-u^2} int v^5 e^{-v^2} int_disk (1 - x^2 - y^2) = 1"),
    e(Orbits, "klauder-chart", "Eqs. 75, 85", "identity resolution by Monte Carlo over C^6 and over the (u, v, x, y, A) chart"),
    e(H0, "hw-expansion", "Eq. 89", "coefficients e^{-(u^2+v^2)/2} u^p v^q/sqrt(p!q!) against <highest weight|z0,w0>"),
    e(H0, "hw-reconstruction", "Eqs. 90, 91", "|z,w> with kappa = 0 rebuilt from SU(3) coherent states"),
    e(H0, "schur-su3", "Eq. 95", "Haar average of U(A)|psi><psi|U(A)^-1 equals P^(p,q;0)/d(p,q)"),
    e(H0, "frame-constant", "Eq. 96", "constant f0 coefficients by quadrature against (2/pi)(p+2)!(q+2)!/(4 p! q! d)"),
    e(H0, "frame-shell", "Eq. 97", "shell coefficients against Haar Monte Carlo of |<e|U(A)|z0,w0>|^2"),
    e(H0, "frame-covariance", "Eqs. 87, 97", "assembled shell frame operator commutes with U(A)"),
    e(Kappa, "sp-coefficients", "Eq. 103a", "normalization of the |k,kappa> expansion coefficients"),
    e(Kappa, "sp-overlap", "Eq. 103b", "<k,kappa'|k,kappa> = 0F1(2k; conj(kappa') kappa)/sqrt(0F1 0F1)"),
    e(Kappa, "sp-measure", "Eq. 103c", "measure normalization for k in {3/2, 2, 5/2}, m <= k+5 (order 2k-1)"),
    e(Kappa, "kappa-eigenstates", "Eqs. 104, 106", "kappa states are K- eigenvectors and reduce to canonical states at kappa = 0"),
    e(Kappa, "kappa-orthonormality", "Eq. 105", "Gram matrix of the kappa basis at fixed kappa"),
    e(Kappa, "kappa-overlap", "Eqs. 111, 113", "closed-form kappa-basis overlap against Fock inner products at cutoff 14"),
    e(Kappa, "nprime-limit", "Eqs. 89, 114", "N'(p,q;0)^2 = (p+q+1)!/(p!q!)"),
    e(Kappa, "kappa-reconstruction", "Eqs. 114, 115", "|z,w> with kappa != 0 rebuilt from SU(3) coherent states"),
    e(Kappa, "frame-kappa-quadrature", "Eqs. 117, 118, 119", "general f0: kappa = 0 matches the H0 quadrature; coefficients positive"),
    e(Kappa, "frame-kappa-shell", "Eq. 120", "kappa-sector shell coefficients against Haar Monte Carlo"),
    e(Kappa, "frame-kappa-limit", "Eqs. 97, 120", "kappa-sector coefficients approach the H0 ones quadratically as kappa -> 0"),
    e(ClassE, "class-e-representative", "Eq. 121", "class e representative and its invariants"),
    e(ClassE, "su2-scalar-states", "Eq. 124a", "SU(2)-scalar states: I^2 = 0, Y = 2(q-p)/3, K- annihilates, matches the canonical I = 0 state"),
    e(ClassE, "su2-scalar-towers", "Eq. 124b", "SU(2)-scalar kappa states are K- eigenvectors"),
    e(ClassE, "class-e-expansion", "Eq. 126", "class e coefficients against Fock projections onto the SU(2)-scalar towers"),
    e(ClassE, "class-e-reconstruction", "Eqs. 127, 128", "class e |z,w> rebuilt from SU(2)-scalar fiducials"),
    e(ClassE, "frame-class-e", "Eq. 130", "class e coefficients against Haar Monte Carlo on the kappa sectors"),
    e(ClassE, "frame-class-e-smeared", "Eq. 130", "f0(u) delta(uv - |kappa|) smearing against composite Simpson"),
    e(Appendix, "jacobi-forms", "Eqs. A.2, A.4", "Jacobi polynomials: recurrence, Gamma series and binomial forms agree"),
    e(Appendix, "jacobi-reflection", "Eq. A.6", "x^M0 P^(0,2M0)_(I-M0)(2x-1) = x^-M0 P^(0,-2M0)_(I+M0)(2x-1)"),
    e(Appendix, "ak-identity", "Eqs. A.8, A.9, A.11", "a_k double sum and rearranged sum equal the closed form in integers, I0 <= 6"),
    e(Appendix, "nprime-routes", "Eqs. 114, 131", "N' double sum against the 2F1 closed form, p, q <= 6, 20 values of t"),
    e(Appendix, "nprime-jacobi", "Eqs. A.1, A.5, 131", "N' from the Jacobi-polynomial sum against the closed form"),
    e(Induced, "dimensions", "Eq. 9", "d(p,q) and k(p,q), and the weight count of every irrep"),
    e(Induced, "highest-weight", "Eq. 70", "highest weight states: norm, weights, K- annihilation"),
    e(Induced, "canonical-basis", "Eqs. 9, 106, 111", "canonical states for p+q <= 4: orthonormal, I^2, I3, Y, J0 eigenvalues"),
    e(Induced, "k-plus-ladder", "Eq. 106", "canonical state at m+1 equals normalized K+ times the state at m"),
    e(Induced, "grade-completeness", "Eq. 9", "canonical states of each grade form an orthonormal basis of that grade"),
    e(Induced, "null-space", "Eqs. 14a, 14c", "H0 states are K- annihilated; states outside H0 are rejected"),
    e(Induced, "induced-values", "Eqs. 17, 98", "wavefunction of the vacuum and of highest weight states"),
    e(Induced, "induced-norm", "Eqs. 14d, 15", "norms and inner products by Monte Carlo over the unit sphere of C^3"),
    e(Induced, "induced-equivariance", "Eqs. 14e, 16, 17", "wavefunction of U(conj A) psi at xi equals psi(A^-1 xi)"),
];

pub fn anchor(suite: Suite, group: &str) -> Option<&'static str> {
    CATALOG.iter().find(|x| x.suite == suite && x.group == group).map(|x| x.anchor)
}

pub fn entries(suite: Suite) -> impl Iterator<Item = &'static Entry> {
    CATALOG.iter().filter(move |x| x.suite == suite)
}

/// Text listing of the checks of the selected suites.
pub fn describe(suites: &[Suite]) -> String {
    let mut out = String::new();
    for &s in suites {
        for x in entries(s) {
            out.push_str(&format!("{}/{}\t{}\t{}\n", s, x.group, x.anchor, x.description));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_unique_per_suite() {
        for (i, a) in CATALOG.iter().enumerate() {
            for b in &CATALOG[i + 1..] {
                assert!(!(a.suite == b.suite && a.group == b.group), "{}/{}", a.suite, a.group);
            }
        }
    }

    #[test]
    fn every_suite_described() {
        for s in Suite::ALL {
            assert!(entries(s).count() > 0, "{s}");
        }
    }
}
