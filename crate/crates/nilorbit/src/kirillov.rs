//! Orbit-method core over `Q`: the skew form `B_φ`, polarization tests,
//! Vergne's polarization, Kirillov's lemma, and coadjoint orbit canonical
//! forms along a flag of ideals.

use crate::group::{coadjoint, multiply, GroupElement, LinearForm};
use crate::nilpotent::{Flag, LieAlgebra, Subalgebra};
use crate::ratlin::*;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KirillovError {
    #[error("the given subspace is not a Lie subalgebra")]
    NotASubalgebra,
    #[error("Kirillov's lemma needs a one-dimensional center, found dimension {0}")]
    CenterNotOneDimensional(usize),
}

/// A pair (φ, 𝒩′) with 𝒩′ totally isotropic for `B_φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizedPair {
    pub phi: LinearForm,
    pub sub: Subalgebra,
    pub polarized: bool,
}

/// Kirillov's lemma frame: 𝒩 = F·X ⊕ F·Y ⊕ F·Z ⊕ W with center F·Z,
/// [X,Y] = Z and [Y,W] = 0.
#[derive(Clone, Debug)]
pub struct KirillovFrame {
    pub x: Vec<Rat>,
    pub y: Vec<Rat>,
    pub z: Vec<Rat>,
    pub w: Subspace,
}

impl KirillovFrame {
    /// The codimension-one ideal 𝒩₀ = F·Y ⊕ F·Z ⊕ W = ker(ad Y).
    pub fn n0(&self, dim: usize) -> Subspace {
        let mut vs = self.w.basis_vectors();
        vs.push(self.y.clone());
        vs.push(self.z.clone());
        Subspace::from_spanning(dim, vs)
    }
}

/// Gram matrix `G[i][j] = φ([e_i, e_j])`.
pub fn gram(n: &LieAlgebra, phi: &LinearForm) -> Mat {
    let mut g = Mat::zeros(n.dim, n.dim);
    for i in 0..n.dim {
        for j in 0..n.dim {
            g[(i, j)] = phi.eval(&n.bracket(&unit_vec(n.dim, i), &unit_vec(n.dim, j)));
        }
    }
    g
}

/// Radical of `B_φ`: all `v` with `φ([v, ·]) = 0`.
pub fn radical(n: &LieAlgebra, phi: &LinearForm) -> Subspace {
    gram(n, phi).kernel()
}

pub fn b_phi(n: &LieAlgebra, phi: &LinearForm, x: &[Rat], y: &[Rat]) -> Rat {
    phi.eval(&n.bracket(x, y))
}

/// True when `B_φ` vanishes on `space × space`.
pub fn is_isotropic(n: &LieAlgebra, phi: &LinearForm, space: &Subspace) -> bool {
    let basis = space.basis_vectors();
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            if !b_phi(n, phi, x, y).is_zero() {
                return false;
            }
        }
    }
    true
}

/// The dimension a polarization must have: (dim 𝒩 + dim rad B_φ)/2.
pub fn polarization_dim(n: &LieAlgebra, phi: &LinearForm) -> usize {
    (n.dim + radical(n, phi).dim()) / 2
}

/// Builds the pair and decides whether it is polarized (isotropic of maximal
/// dimension). Errors when the subspace is not a subalgebra.
pub fn make_pair(
    n: &LieAlgebra,
    phi: &LinearForm,
    space: &Subspace,
) -> Result<PolarizedPair, KirillovError> {
    let sub = n
        .subalgebra(space.clone())
        .ok_or(KirillovError::NotASubalgebra)?;
    let polarized =
        is_isotropic(n, phi, space) && space.dim() == polarization_dim(n, phi);
    Ok(PolarizedPair {
        phi: phi.clone(),
        sub,
        polarized,
    })
}

pub fn is_polarized(
    n: &LieAlgebra,
    phi: &LinearForm,
    space: &Subspace,
) -> Result<bool, KirillovError> {
    Ok(make_pair(n, phi, space)?.polarized)
}

/// Radical of `B_φ` restricted to a subspace, as a subspace of the ambient.
pub fn restricted_radical(n: &LieAlgebra, phi: &LinearForm, space: &Subspace) -> Subspace {
    let basis = space.basis_vectors();
    let k = basis.len();
    if k == 0 {
        return Subspace::zero(n.dim);
    }
    let mut g = Mat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = b_phi(n, phi, &basis[i], &basis[j]);
        }
    }
    let ker = g.kernel();
    let vectors = ker
        .basis_vectors()
        .into_iter()
        .map(|c| {
            let mut v = zero_vec(n.dim);
            for (a, ca) in c.iter().enumerate() {
                for t in 0..n.dim {
                    let add = ca * &basis[a][t];
                    v[t] += add;
                }
            }
            v
        })
        .collect();
    Subspace::from_spanning(n.dim, vectors)
}

/// Vergne's polarization `P(φ) = Σ_i rad(B_φ|_{N_i})` along a complete flag
/// of ideals. The result is a polarized subalgebra; if the flag and φ are
/// σ-stable, so is the output.
pub fn vergne_polarization(n: &LieAlgebra, phi: &LinearForm, flag: &Flag) -> Subalgebra {
    let mut p = Subspace::zero(n.dim);
    for step in &flag.steps {
        p = p.sum(&restricted_radical(n, phi, step));
    }
    n.subalgebra(p)
        .expect("Vergne construction always yields a subalgebra")
}

/// Kirillov's lemma decomposition for algebras with one-dimensional center.
/// Deterministic: Y is the first flag-adapted basis vector mapping into the
/// center of 𝒩/𝒵 without being central, X the first with [X,Y] = Z after
/// rescaling, W a greedy complement of span(Y,Z) in ker(ad Y).
pub fn kirillov_lemma(n: &LieAlgebra) -> Result<KirillovFrame, KirillovError> {
    let center = n.center();
    if center.dim() != 1 {
        return Err(KirillovError::CenterNotOneDimensional(center.dim()));
    }
    let z = center.basis_vectors().pop().unwrap();
    let zsub = n.subalgebra(center.clone()).unwrap();
    let (q, proj) = n.quotient(&zsub).expect("center is an ideal");
    let qcenter = q.center();
    // Preimage of the quotient center: kernel of (residual after reduction by
    // qcenter) ∘ proj.
    let mut rows = Vec::new();
    let red = residual_matrix(&qcenter);
    let rp = red.mul(&proj);
    for i in 0..rp.rows {
        rows.push(rp.row(i).to_vec());
    }
    let z2 = Mat::from_rows(rows).kernel();

    let adapted = n.jordan_holder_flag(None).adapted_basis();
    let y = adapted
        .iter()
        .find(|v| z2.contains(v) && !center.contains(v))
        .expect("nilpotent with 1-dim center has a noncentral vector over the center")
        .clone();
    // [v, Y] lies in F·Z for every v; find the first with a nonzero multiple.
    let zpivot = z.iter().position(|c| !c.is_zero()).unwrap();
    let (xv, c) = adapted
        .iter()
        .find_map(|v| {
            let b = n.bracket(v, &y);
            if b[zpivot].is_zero() {
                None
            } else {
                Some((v.clone(), &b[zpivot] / &z[zpivot]))
            }
        })
        .expect("ad(Y) is nonzero onto the center");
    let x = scale_vec(&c.recip(), &xv);
    debug_assert_eq!(n.bracket(&x, &y), z);

    let ker_ad_y = n.ad(&y).kernel();
    let yz = Subspace::from_spanning(n.dim, vec![y.clone(), z.clone()]);
    let w = Subspace::from_spanning(n.dim, yz.complement_within(&ker_ad_y));
    debug_assert_eq!(w.dim() + 3, n.dim);
    Ok(KirillovFrame { x, y, z, w })
}

/// Matrix whose kernel is exactly `s`: the residual of reduction against the
/// rref basis.
pub fn residual_matrix(s: &Subspace) -> Mat {
    let m = s.ambient_dim;
    let mut r = Mat::identity(m);
    for (i, &p) in s.pivots().iter().enumerate() {
        for j in 0..m {
            let sub = s.basis()[(i, j)].clone();
            r[(j, p)] = if j == p { Rat::one() - sub } else { -sub };
        }
    }
    r
}

/// Canonical form of φ under the subgroup `exp(acting)` along a flag:
/// zeroes every reachable flag coordinate bottom-up. For `acting` = the whole
/// algebra this is the coadjoint-orbit canonical form. Returns the canonical
/// form and a witness `w` with `w.φ = canonical`.
pub fn canonicalize_under(
    n: &LieAlgebra,
    acting: &Subspace,
    flag: &Flag,
    phi: &LinearForm,
) -> (LinearForm, GroupElement) {
    let adapted = flag.adapted_basis();
    let act_basis = acting.basis_vectors();
    let mut cur = phi.clone();
    let mut witness = GroupElement::identity(n.dim);
    if act_basis.is_empty() {
        return (cur, witness);
    }
    for j in 0..adapted.len() {
        let t = cur.eval(&adapted[j]);
        if t.is_zero() {
            // Still canonical: a zero jump coordinate stays zero.
            continue;
        }
        // Solve for v in the acting algebra with B_φ(v, b_k) = 0 for k < j
        // and B_φ(v, b_j) = 1; acting by exp(t·v) is then exactly affine on
        // coordinate j and fixes coordinates below.
        let mut a = Mat::zeros(j + 1, act_basis.len());
        for k in 0..=j {
            for (col, v) in act_basis.iter().enumerate() {
                a[(k, col)] = b_phi(n, &cur, v, &adapted[k]);
            }
        }
        let mut rhs = zero_vec(j + 1);
        rhs[j] = Rat::one();
        let Some(c) = a.solve(&rhs) else {
            continue; // not a jump coordinate for this action
        };
        let mut v = zero_vec(n.dim);
        for (col, cv) in c.iter().enumerate() {
            for i in 0..n.dim {
                let add = cv * &act_basis[col][i];
                v[i] += add;
            }
        }
        let u = GroupElement::new(scale_vec(&t, &v));
        cur = coadjoint(n, &u, &cur);
        debug_assert!(cur.eval(&adapted[j]).is_zero());
        witness = multiply(n, &u, &witness);
    }
    (cur, witness)
}

/// Canonical orbit representative under the full coadjoint action, with a
/// witness `w` satisfying `w.φ = φ₀`. Two forms lie in the same orbit exactly
/// when their canonical forms agree.
pub fn orbit_canonical_form(n: &LieAlgebra, phi: &LinearForm) -> (LinearForm, GroupElement) {
    let flag = n.jordan_holder_flag(None);
    canonicalize_under(n, &Subspace::full(n.dim), &flag, phi)
}

/// Witness `u` with `u.φ = φ'`, or `None` when the orbits differ.
pub fn same_orbit(n: &LieAlgebra, phi: &LinearForm, phi2: &LinearForm) -> Option<GroupElement> {
    let (c1, w1) = orbit_canonical_form(n, phi);
    let (c2, w2) = orbit_canonical_form(n, phi2);
    if c1 != c2 {
        return None;
    }
    Some(multiply(n, &w2.inverse(), &w1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::catalog;

    fn lf(v: Vec<i64>) -> LinearForm {
        LinearForm::new(v.into_iter().map(rint).collect())
    }

    #[test]
    fn gram_h3_zstar() {
        let n = catalog("h3").unwrap();
        let g = gram(&n, &lf(vec![0, 0, 1]));
        let mut expect = Mat::zeros(3, 3);
        expect[(0, 1)] = rint(1);
        expect[(1, 0)] = rint(-1);
        assert_eq!(g, expect);
        assert_eq!(gram(&n, &lf(vec![0, 0, 0])), Mat::zeros(3, 3));
    }

    #[test]
    fn gram_f4_e4star() {
        let n = catalog("filiform4").unwrap();
        let g = gram(&n, &lf(vec![0, 0, 0, 1]));
        assert_eq!(g[(0, 2)], rint(1));
        assert_eq!(g[(2, 0)], rint(-1));
        let mut nonzero = 0;
        for i in 0..4 {
            for j in 0..4 {
                if !g[(i, j)].is_zero() {
                    nonzero += 1;
                }
            }
        }
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn radical_examples() {
        let n = catalog("h3").unwrap();
        let r = radical(&n, &lf(vec![0, 0, 1]));
        assert_eq!(r, Subspace::from_spanning(3, vec![unit_vec(3, 2)]));
        assert_eq!(radical(&n, &lf(vec![0, 0, 0])), Subspace::full(3));
        let f = catalog("filiform4").unwrap();
        let rf = radical(&f, &lf(vec![0, 0, 0, 1]));
        assert_eq!(
            rf,
            Subspace::from_spanning(4, vec![unit_vec(4, 1), unit_vec(4, 3)])
        );
    }

    #[test]
    fn polarized_h3_lagrangian() {
        let n = catalog("h3").unwrap();
        let zstar = lf(vec![0, 0, 1]);
        let lagr = Subspace::from_spanning(3, vec![unit_vec(3, 1), unit_vec(3, 2)]);
        assert!(is_polarized(&n, &zstar, &lagr).unwrap());
        let small = Subspace::from_spanning(3, vec![unit_vec(3, 2)]);
        assert!(!is_polarized(&n, &zstar, &small).unwrap());
        assert!(!is_polarized(&n, &zstar, &Subspace::full(3)).unwrap());
    }

    #[test]
    fn vergne_h3_gives_lagrangian() {
        let n = catalog("h3").unwrap();
        let flag = n.jordan_holder_flag(None);
        let p = vergne_polarization(&n, &lf(vec![0, 0, 1]), &flag);
        assert_eq!(
            p.space,
            Subspace::from_spanning(3, vec![unit_vec(3, 1), unit_vec(3, 2)])
        );
    }

    #[test]
    fn vergne_zero_form_gives_everything() {
        let n = catalog("h5").unwrap();
        let flag = n.jordan_holder_flag(None);
        let p = vergne_polarization(&n, &LinearForm::zero(5), &flag);
        assert_eq!(p.space, Subspace::full(5));
    }

    #[test]
    fn vergne_filiform4_is_polarized() {
        let n = catalog("filiform4").unwrap();
        let flag = n.jordan_holder_flag(None);
        let phi = lf(vec![0, 0, 0, 1]);
        let p = vergne_polarization(&n, &phi, &flag);
        assert_eq!(p.space.dim(), 3);
        assert!(is_polarized(&n, &phi, &p.space).unwrap());
    }

    #[test]
    fn kirillov_lemma_h3() {
        let n = catalog("h3").unwrap();
        let f = kirillov_lemma(&n).unwrap();
        assert_eq!(f.x, unit_vec(3, 0));
        assert_eq!(f.y, unit_vec(3, 1));
        assert_eq!(f.z, unit_vec(3, 2));
        assert_eq!(f.w.dim(), 0);
    }

    #[test]
    fn kirillov_lemma_filiform4() {
        let n = catalog("filiform4").unwrap();
        let f = kirillov_lemma(&n).unwrap();
        assert_eq!(f.x, unit_vec(4, 0));
        assert_eq!(f.y, unit_vec(4, 2));
        assert_eq!(f.z, unit_vec(4, 3));
        assert_eq!(f.w, Subspace::from_spanning(4, vec![unit_vec(4, 1)]));
        // 𝒩₀ is a codim-1 ideal.
        let n0 = f.n0(4);
        assert_eq!(n0.dim(), 3);
        assert!(n.is_ideal(&n0));
    }

    #[test]
    fn kirillov_lemma_h5_frame_invariants() {
        let n = catalog("h5").unwrap();
        let f = kirillov_lemma(&n).unwrap();
        assert_eq!(n.bracket(&f.x, &f.y), f.z);
        for wv in f.w.basis_vectors() {
            assert!(is_zero_vec(&n.bracket(&f.y, &wv)));
        }
        assert_eq!(f.w.dim(), 2);
        let n0 = f.n0(5);
        assert_eq!(n0.dim(), 4);
        assert!(n.is_ideal(&n0));
    }

    #[test]
    fn kirillov_lemma_needs_small_center() {
        let n = catalog("abelian_2").unwrap();
        assert_eq!(
            kirillov_lemma(&n).unwrap_err(),
            KirillovError::CenterNotOneDimensional(2)
        );
    }

    #[test]
    fn canonical_form_h3() {
        let n = catalog("h3").unwrap();
        let phi = lf(vec![5, 7, 1]);
        let (canon, w) = orbit_canonical_form(&n, &phi);
        assert_eq!(canon, lf(vec![0, 0, 1]));
        assert_eq!(coadjoint(&n, &w, &phi), canon);
        // φ = 0 is a fixed point.
        let (c0, w0) = orbit_canonical_form(&n, &LinearForm::zero(3));
        assert_eq!(c0, LinearForm::zero(3));
        assert!(w0.is_identity());
    }

    #[test]
    fn same_orbit_h3() {
        let n = catalog("h3").unwrap();
        let zstar = lf(vec![0, 0, 1]);
        assert!(same_orbit(&n, &zstar, &zstar).is_some());
        // central value is an orbit invariant
        assert!(same_orbit(&n, &zstar, &lf(vec![1, 0, 0])).is_none());
        let other = lf(vec![5, 0, 1]);
        let u = same_orbit(&n, &zstar, &other).unwrap();
        assert_eq!(coadjoint(&n, &u, &zstar), other);
        assert_eq!(u.coords, vec![rint(0), rint(5), rint(0)]);
    }

    #[test]
    fn residual_matrix_kernel_is_subspace() {
        let s = Subspace::from_spanning(3, vec![vec![rint(1), rint(2), rint(0)]]);
        let r = residual_matrix(&s);
        assert_eq!(r.kernel(), s);
    }
}
