//! Involutions of a nilpotent Lie algebra, the symmetric-space
//! decomposition 𝒩 = 𝒩^σ ⊕ 𝒩^{−σ}, the σ-action on linear forms,
//! σ-fixed orbit representatives, the distinction classifier, and the
//! quadratic restriction-of-scalars model.

use crate::group::{
    coadjoint, multiply, polar_decompose, sqrt, GroupElement, LinearForm,
};
use crate::kirillov::{radical, same_orbit, canonicalize_under, vergne_polarization};
use crate::nilpotent::{LieAlgebra, Subalgebra};
use crate::ratlin::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymmetricError {
    #[error("matrix is not an involution (square is not the identity)")]
    NotInvolutive,
    #[error("not a Lie automorphism: sigma[e{0},e{1}] != [sigma e{0}, sigma e{1}]")]
    NotAutomorphism(usize, usize),
    #[error("expected a {0}x{0} matrix")]
    BadShape(usize),
    #[error("both forms must be sigma-fixed")]
    PreconditionNotSigmaFixed,
    #[error("eps = {0} is a square, the quadratic extension would split")]
    EpsIsSquare(String),
}

/// A Lie-algebra involution, acting on the group through exp/ln.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    pub matrix: Mat,
}

impl Involution {
    /// Validates σ² = id and the automorphism property against `alg`.
    pub fn new(alg: &LieAlgebra, matrix: Mat) -> Result<Self, SymmetricError> {
        if matrix.rows != alg.dim || matrix.cols != alg.dim {
            return Err(SymmetricError::BadShape(alg.dim));
        }
        if matrix.mul(&matrix) != Mat::identity(alg.dim) {
            return Err(SymmetricError::NotInvolutive);
        }
        for i in 0..alg.dim {
            for j in i + 1..alg.dim {
                let lhs = matrix.mul_vec(&alg.bracket(&unit_vec(alg.dim, i), &unit_vec(alg.dim, j)));
                let rhs = alg.bracket(&matrix.mul_vec(&unit_vec(alg.dim, i)), &matrix.mul_vec(&unit_vec(alg.dim, j)));
                if lhs != rhs {
                    return Err(SymmetricError::NotAutomorphism(i, j));
                }
            }
        }
        Ok(Involution { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Involution {
            matrix: Mat::identity(dim),
        }
    }

    pub fn apply_vec(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.mul_vec(v)
    }

    /// σ on the group: `exp(σ(ln u))`.
    pub fn apply_group(&self, u: &GroupElement) -> GroupElement {
        GroupElement::new(self.apply_vec(&u.coords))
    }

    /// σ on forms: `σ(φ) = −φ∘σ`.
    pub fn on_form(&self, phi: &LinearForm) -> LinearForm {
        LinearForm::new(neg_vec(&self.matrix.transpose().mul_vec(&phi.coords)))
    }
}

/// The eigenspace decomposition 𝒩 = 𝒩^σ ⊕ 𝒩^{−σ}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPair {
    pub involution: Involution,
    pub fixed: Subspace,
    pub anti: Subspace,
}

impl SymmetricPair {
    pub fn new(alg: &LieAlgebra, s: Involution) -> Self {
        let dim = alg.dim;
        let id = Mat::identity(dim);
        let fixed = s.matrix.add(&id.scale(&rint(-1))).kernel();
        let anti = s.matrix.add(&id).kernel();
        debug_assert_eq!(fixed.dim() + anti.dim(), dim);
        SymmetricPair {
            involution: s,
            fixed,
            anti,
        }
    }
}

/// Validates an involution matrix and computes the eigenspace split.
pub fn validate_involution(
    alg: &LieAlgebra,
    matrix: Mat,
) -> Result<SymmetricPair, SymmetricError> {
    let s = Involution::new(alg, matrix)?;
    Ok(SymmetricPair::new(alg, s))
}

/// A form in the coadjoint orbit of `phi` fixed by σ, with a transporter
/// `g` satisfying `g.phi = result`, or `None` when the orbit of `phi` is not
/// conjugate self-dual. Follows the fixed-point recursion: polar-decompose
/// the witness, move by the square root of its anti-fixed part, and descend
/// into a σ-stable normal subalgebra of smaller dimension.
pub fn find_sigma_fixed_in_orbit(
    n: &LieAlgebra,
    s: &Involution,
    phi: &LinearForm,
) -> Option<(LinearForm, GroupElement)> {
    let mut cur = phi.clone();
    let mut g = GroupElement::identity(n.dim);
    if s.on_form(&cur) == cur {
        return Some((cur, g));
    }
    // Fast path: canonicalize under U^σ along a σ-stable flag and test.
    let pair = SymmetricPair::new(n, s.clone());
    let stable_flag = n.jordan_holder_flag(Some(s));
    let (fast, fast_w) = canonicalize_under(n, &pair.fixed, &stable_flag, phi);
    if s.on_form(&fast) == fast {
        return Some((fast, fast_w));
    }

    // General recursion, iteratively. Invariants: `u.cur = σ(cur)`,
    // `g.phi = cur`, `ln u ∈ m`, and `m` is a σ-stable subalgebra.
    let mut u = same_orbit(n, &cur, &s.on_form(&cur))?;
    let mut m = Subspace::full(n.dim);
    loop {
        if s.on_form(&cur) == cur {
            return Some((cur, g));
        }
        assert!(m.dim() > 0, "descent exhausted without a fixed point");
        debug_assert_eq!(coadjoint(n, &u, &cur), s.on_form(&cur));

        let (_, uminus) = polar_decompose(n, s, &u);
        let u1 = sqrt(&uminus);
        let v = multiply(n, &multiply(n, &u1.inverse(), &u), &u1.inverse());
        cur = coadjoint(n, &u1, &cur);
        g = multiply(n, &u1, &g);

        // Stabilizer of the old form inside m, then any codim-1 subspace V of
        // m above K + [m,m]; the new witness lives in exp(V ∩ σV).
        let k = m.intersect(&radical(n, &cur));
        let mb = m.basis_vectors();
        let mut span = k.basis_vectors();
        for a in &mb {
            for b in &mb {
                span.push(n.bracket(a, b));
            }
        }
        let mut v_space = Subspace::from_spanning(n.dim, span);
        assert!(
            v_space.dim() < m.dim(),
            "stabilizer plus derived algebra filled the acting algebra"
        );
        for extra in &mb {
            if v_space.dim() == m.dim() - 1 {
                break;
            }
            if !v_space.contains(extra) {
                let mut b = v_space.basis_vectors();
                b.push(extra.clone());
                v_space = Subspace::from_spanning(n.dim, b);
            }
        }
        let sigma_v = Subspace::from_spanning(
            n.dim,
            v_space.basis_vectors().iter().map(|w| s.apply_vec(w)).collect(),
        );
        let next_m = v_space.intersect(&sigma_v);
        assert!(next_m.dim() < m.dim(), "descent made no progress");
        debug_assert!(next_m.contains(&v.coords));
        m = next_m;
        u = v;
    }
}

/// Distinction test: the orbit of φ contains a σ-fixed form exactly when it
/// is conjugate self-dual.
pub fn is_distinguished(n: &LieAlgebra, s: &Involution, phi: &LinearForm) -> bool {
    find_sigma_fixed_in_orbit(n, s, phi).is_some()
}

/// For σ-fixed forms in the same coadjoint orbit, a witness in U^σ.
/// Errors unless both inputs are σ-fixed; `None` when the orbits differ.
pub fn usigma_same_orbit(
    n: &LieAlgebra,
    s: &Involution,
    phi: &LinearForm,
    phi2: &LinearForm,
) -> Result<Option<GroupElement>, SymmetricError> {
    if s.on_form(phi) != *phi || s.on_form(phi2) != *phi2 {
        return Err(SymmetricError::PreconditionNotSigmaFixed);
    }
    let Some(u) = same_orbit(n, phi, phi2) else {
        return Ok(None);
    };
    // σ(u)⁻¹u stabilizes φ, hence so does its square root u⁻; the σ-fixed
    // part u⁺ = u(u⁻)⁻¹ then moves φ to φ₂ as well.
    let (uplus, uminus) = polar_decompose(n, s, &u);
    debug_assert_eq!(coadjoint(n, &uminus, phi), *phi);
    debug_assert_eq!(coadjoint(n, &uplus, phi), *phi2);
    debug_assert_eq!(s.apply_group(&uplus), uplus);
    Ok(Some(uplus))
}

/// Full distinction report for one form.
#[derive(Clone, Debug)]
pub struct DistinctionReport {
    pub phi: LinearForm,
    pub distinguished: bool,
    pub sigma_fixed_rep: Option<LinearForm>,
    pub stable_polarization: Option<Subalgebra>,
    pub witness: Option<GroupElement>,
}

pub fn distinguish(n: &LieAlgebra, s: &Involution, phi: &LinearForm) -> DistinctionReport {
    match find_sigma_fixed_in_orbit(n, s, phi) {
        None => DistinctionReport {
            phi: phi.clone(),
            distinguished: false,
            sigma_fixed_rep: None,
            stable_polarization: None,
            witness: None,
        },
        Some((phi0, g)) => {
            let flag = n.jordan_holder_flag(Some(s));
            let pol = vergne_polarization(n, &phi0, &flag);
            DistinctionReport {
                phi: phi.clone(),
                distinguished: true,
                sigma_fixed_rep: Some(phi0),
                stable_polarization: Some(pol),
                witness: Some(g),
            }
        }
    }
}

/// Canonical σ-fixed representative of a distinguished orbit: the σ-fixed
/// form canonicalized under U^σ along a σ-stable flag. Two distinguished
/// forms share a U-orbit exactly when their representatives agree
/// (cross-checked against the finite oracle).
pub fn distinguished_canonical_rep(
    n: &LieAlgebra,
    s: &Involution,
    phi: &LinearForm,
) -> Option<LinearForm> {
    let (phi0, _) = find_sigma_fixed_in_orbit(n, s, phi)?;
    let pair = SymmetricPair::new(n, s.clone());
    let flag = n.jordan_holder_flag(Some(s));
    Some(canonicalize_under(n, &pair.fixed, &flag, &phi0).0)
}

/// Restriction of scalars along E = F(d), d² = eps: the algebra 𝒩₀ ⊗ E seen
/// over F on the basis {e_1..e_m, d·e_1..d·e_m}, with σ the conjugation
/// d ↦ −d.
#[derive(Clone, Debug)]
pub struct GaloisModel {
    pub algebra: LieAlgebra,
    pub involution: Involution,
    pub base_dim: usize,
    pub eps: Rat,
}

impl GaloisModel {
    /// The correspondence map: a form φ_σ on 𝒩₀ goes to the form
    /// φ(N + dN′) = φ_σ(N′), which vanishes on 𝒩^σ.
    pub fn c_map(&self, phi_sigma: &LinearForm) -> LinearForm {
        assert_eq!(phi_sigma.coords.len(), self.base_dim);
        let mut coords = zero_vec(self.base_dim);
        coords.extend(phi_sigma.coords.iter().cloned());
        LinearForm::new(coords)
    }
}

pub fn galois_model(n0: &LieAlgebra, eps: &Rat) -> Result<GaloisModel, SymmetricError> {
    if is_square_rat(eps) {
        return Err(SymmetricError::EpsIsSquare(format_rat(eps)));
    }
    let m = n0.dim;
    let dim = 2 * m;
    let mut brackets = vec![vec![zero_vec(dim); dim]; dim];
    for i in 0..m {
        for j in 0..m {
            let c = n0.bracket(&unit_vec(m, i), &unit_vec(m, j));
            for k in 0..m {
                // [e_i, e_j] = Σ c_k e_k   [de_i, de_j] = eps Σ c_k e_k
                // [e_i, de_j] = [de_i, e_j] = Σ c_k de_k
                brackets[i][j][k] = c[k].clone();
                brackets[m + i][m + j][k] = eps * &c[k];
                brackets[i][m + j][m + k] = c[k].clone();
                brackets[m + i][j][m + k] = c[k].clone();
            }
        }
    }
    let mut labels: Vec<String> = n0.labels.clone();
    labels.extend(n0.labels.iter().map(|l| format!("d{l}")));
    let algebra = LieAlgebra::new(labels, brackets)
        .expect("scalar extension preserves antisymmetry, Jacobi and nilpotency");
    let mut sm = Mat::identity(dim);
    for i in m..dim {
        sm[(i, i)] = rint(-1);
    }
    let involution = Involution::new(&algebra, sm).expect("conjugation is an automorphism");
    Ok(GaloisModel {
        algebra,
        involution,
        base_dim: m,
        eps: eps.clone(),
    })
}

/// Involutions used across the test suites, per catalog algebra.
pub fn test_involutions(name: &str, alg: &LieAlgebra) -> Vec<Involution> {
    let diag = |signs: &[i64]| -> Involution {
        let mut mat = Mat::identity(alg.dim);
        for (i, &s) in signs.iter().enumerate() {
            mat[(i, i)] = rint(s);
        }
        Involution::new(alg, mat).expect("catalog involution must validate")
    };
    match name {
        "h3" => vec![
            diag(&[-1, 1, -1]),
            diag(&[1, -1, -1]),
            Involution::identity(3),
        ],
        "h5" => vec![diag(&[-1, 1, -1, 1, -1])],
        "filiform4" => vec![diag(&[-1, 1, -1, 1]), diag(&[-1, -1, 1, -1])],
        "free2_3" => vec![diag(&[-1, 1, -1, -1, 1, -1])],
        "ut4" => {
            // Graded involution (−1)^{j−i} on E_{i,j}, and the anti-transpose
            // E_{ij} ↦ −E_{5−j,5−i} (basis order E12,E23,E34,E13,E24,E14).
            let g = diag(&[-1, -1, -1, 1, 1, -1]);
            let mut at = Mat::zeros(6, 6);
            at[(0, 2)] = rint(-1);
            at[(2, 0)] = rint(-1);
            at[(1, 1)] = rint(-1);
            at[(3, 4)] = rint(-1);
            at[(4, 3)] = rint(-1);
            at[(5, 5)] = rint(-1);
            vec![g, Involution::new(alg, at).expect("anti-transpose is an automorphism")]
        }
        _ => {
            if name.starts_with("abelian_") {
                let signs: Vec<i64> = (0..alg.dim).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
                vec![diag(&signs)]
            } else {
                vec![Involution::identity(alg.dim)]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::catalog;
    use num_traits::Zero;

    fn lf(v: Vec<i64>) -> LinearForm {
        LinearForm::new(v.into_iter().map(rint).collect())
    }

    fn h3_sigma() -> (LieAlgebra, Involution) {
        let n = catalog("h3").unwrap();
        let s = test_involutions("h3", &n).remove(0);
        (n, s)
    }

    #[test]
    fn validate_h3_diag() {
        let (n, s) = h3_sigma();
        let pair = SymmetricPair::new(&n, s);
        assert_eq!(pair.fixed, Subspace::from_spanning(3, vec![unit_vec(3, 1)]));
        assert_eq!(
            pair.anti,
            Subspace::from_spanning(3, vec![unit_vec(3, 0), unit_vec(3, 2)])
        );
        assert!(n.is_subalgebra(&pair.fixed));
    }

    #[test]
    fn validate_identity() {
        let n = catalog("h3").unwrap();
        let pair = validate_involution(&n, Mat::identity(3)).unwrap();
        assert_eq!(pair.fixed, Subspace::full(3));
        assert_eq!(pair.anti.dim(), 0);
    }

    #[test]
    fn reject_swap_non_automorphism() {
        let n = catalog("h3").unwrap();
        let mut m = Mat::zeros(3, 3);
        m[(0, 1)] = rint(1);
        m[(1, 0)] = rint(1);
        m[(2, 2)] = rint(1);
        assert_eq!(
            validate_involution(&n, m).unwrap_err(),
            SymmetricError::NotAutomorphism(0, 1)
        );
    }

    #[test]
    fn reject_non_involutive() {
        let n = catalog("abelian_2").unwrap();
        let mut m = Mat::identity(2);
        m[(0, 0)] = rint(2);
        assert_eq!(
            validate_involution(&n, m).unwrap_err(),
            SymmetricError::NotInvolutive
        );
    }

    #[test]
    fn sigma_on_form_examples() {
        let (n, s) = h3_sigma();
        assert_eq!(s.on_form(&lf(vec![0, 0, 1])), lf(vec![0, 0, 1]));
        assert_eq!(s.on_form(&LinearForm::zero(3)), LinearForm::zero(3));
        // supported on the fixed line → global minus
        assert_eq!(s.on_form(&lf(vec![0, 4, 0])), lf(vec![0, -4, 0]));
        let _ = n;
    }

    #[test]
    fn sigma_equivariance() {
        let (n, s) = h3_sigma();
        let u = GroupElement::new(vec![rint(2), rint(-3), rat(1, 2)]);
        let phi = lf(vec![1, 5, 7]);
        assert_eq!(
            s.on_form(&coadjoint(&n, &u, &phi)),
            coadjoint(&n, &s.apply_group(&u), &s.on_form(&phi))
        );
    }

    #[test]
    fn sigma_fixed_rep_xstar_plus_zstar() {
        let (n, s) = h3_sigma();
        let phi = lf(vec![1, 0, 1]);
        let (phi0, g) = find_sigma_fixed_in_orbit(&n, &s, &phi).unwrap();
        assert_eq!(s.on_form(&phi0), phi0);
        assert!(phi0.coords[1].is_zero());
        assert_eq!(phi0.coords[2], rint(1));
        assert_eq!(coadjoint(&n, &g, &phi), phi0);
        // σ-fixed here coincides with vanishing on the fixed line span(e₂).
        let pair = SymmetricPair::new(&n, s.clone());
        for v in pair.fixed.basis_vectors() {
            assert!(phi0.eval(&v).is_zero());
        }
    }

    #[test]
    fn ystar_not_distinguished() {
        let (n, s) = h3_sigma();
        assert!(!is_distinguished(&n, &s, &lf(vec![0, 1, 0])));
        assert!(is_distinguished(&n, &s, &lf(vec![0, 0, 1])));
        assert!(is_distinguished(&n, &s, &LinearForm::zero(3)));
    }

    #[test]
    fn usigma_witness_h3() {
        let (n, s) = h3_sigma();
        let zstar = lf(vec![0, 0, 1]);
        let other = lf(vec![1, 0, 1]);
        let id = usigma_same_orbit(&n, &s, &zstar, &zstar).unwrap().unwrap();
        assert_eq!(coadjoint(&n, &id, &zstar), zstar);
        let w = usigma_same_orbit(&n, &s, &zstar, &other).unwrap().unwrap();
        assert_eq!(s.apply_group(&w), w);
        assert_eq!(coadjoint(&n, &w, &zstar), other);
        // both σ-fixed, different orbits
        assert_eq!(
            usigma_same_orbit(&n, &s, &zstar, &LinearForm::zero(3)).unwrap(),
            None
        );
        // precondition violation
        assert_eq!(
            usigma_same_orbit(&n, &s, &lf(vec![0, 1, 0]), &zstar).unwrap_err(),
            SymmetricError::PreconditionNotSigmaFixed
        );
    }

    #[test]
    fn distinguish_report_has_stable_polarization() {
        let (n, s) = h3_sigma();
        let rep = distinguish(&n, &s, &lf(vec![1, 0, 1]));
        assert!(rep.distinguished);
        let pol = rep.stable_polarization.unwrap();
        // σ-stable: σ maps the polarization onto itself
        let image = Subspace::from_spanning(
            3,
            pol.space.basis_vectors().iter().map(|v| s.apply_vec(v)).collect(),
        );
        assert_eq!(image, pol.space);
        let phi0 = rep.sigma_fixed_rep.unwrap();
        assert!(crate::kirillov::is_polarized(&n, &phi0, &pol.space).unwrap());
    }

    #[test]
    fn galois_abelian_1() {
        let n0 = catalog("abelian_1").unwrap();
        let g = galois_model(&n0, &rint(2)).unwrap();
        assert_eq!(g.algebra.dim, 2);
        assert_eq!(g.involution.matrix[(1, 1)], rint(-1));
        assert_eq!(g.c_map(&lf(vec![3])), lf(vec![0, 3]));
        assert_eq!(
            galois_model(&n0, &rint(4)).unwrap_err(),
            SymmetricError::EpsIsSquare("4".into())
        );
    }

    #[test]
    fn galois_h3() {
        let n0 = catalog("h3").unwrap();
        let g = galois_model(&n0, &rint(-1)).unwrap();
        assert_eq!(g.algebra.dim, 6);
        assert_eq!(g.algebra.class, 2);
        // [e1, de2] = de3, [de1, de2] = eps e3 = -e3
        assert_eq!(
            g.algebra.bracket(&unit_vec(6, 0), &unit_vec(6, 4)),
            unit_vec(6, 5)
        );
        assert_eq!(
            g.algebra.bracket(&unit_vec(6, 3), &unit_vec(6, 4)),
            neg_vec(&unit_vec(6, 2))
        );
        // fixed part is the base copy, isomorphic to h3
        let pair = SymmetricPair::new(&g.algebra, g.involution.clone());
        assert_eq!(pair.fixed.dim(), 3);
        assert!(g.algebra.is_subalgebra(&pair.fixed));
        // c_map lands in forms vanishing on the fixed part
        let phi = g.c_map(&lf(vec![1, 2, 3]));
        for v in pair.fixed.basis_vectors() {
            assert!(phi.eval(&v).is_zero());
        }
    }

    #[test]
    fn catalog_involutions_validate() {
        for name in crate::nilpotent::CATALOG_NAMES {
            let alg = catalog(name).unwrap();
            for s in test_involutions(name, &alg) {
                let pair = validate_involution(&alg, s.matrix.clone()).unwrap();
                assert!(alg.is_subalgebra(&pair.fixed));
            }
        }
    }
}
