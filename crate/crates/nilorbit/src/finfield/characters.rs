//! Exact character theory for the finite models: the character ψ_φ of a
//! subgroup exp(𝒩′), induced characters, inner products, Frobenius Hom
//! dimensions, and mod-p Vergne polarizations.

use super::cyclotomic::CycInt;
use super::model::{linear_orbits, FiniteModel, OracleError, Subgroup};
use super::modp::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharError {
    #[error("phi is not a character on the subalgebra: phi([b{0},b{1}]) != 0")]
    NotACharacter(usize, usize),
    #[error("induced character sum not divisible by the subgroup order")]
    InexactDivision,
    #[error("inner product is not a rational number")]
    NonRationalResult,
    #[error("Frobenius sum is not a non-negative integer multiple of |H|")]
    NonIntegerDim,
}

/// φ restricted to the subalgebra must kill brackets, so that ψ_φ is
/// multiplicative.
pub fn check_character(
    model: &FiniteModel,
    phi: &[u64],
    sub: &SubspaceFp,
) -> Result<(), CharError> {
    let basis = sub.basis_vectors();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let br = model.bracket_fp(&basis[i], &basis[j]);
            if dot_mod(phi, &br, model.p) != 0 {
                return Err(CharError::NotACharacter(i, j));
            }
        }
    }
    Ok(())
}

pub fn dot_mod(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).map(|(x, y)| x * y % p).sum::<u64>() % p
}

/// ψ_φ(u) = ζ_p^{φ(ln u)} for u in the subgroup exp(𝒩′).
pub fn psi_phi(
    model: &FiniteModel,
    phi: &[u64],
    sub: &SubspaceFp,
    u: &[u64],
) -> Result<CycInt, CharError> {
    check_character(model, phi, sub)?;
    Ok(CycInt::zeta_pow(model.p, dot_mod(phi, u, model.p)))
}

/// A class function, stored by conjugacy-class id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<CycInt>,
}

impl ClassFunction {
    pub fn value_at(&self, model: &FiniteModel, g: usize) -> &CycInt {
        let c = model.conjugacy_classes().orbit_of[g] as usize;
        &self.values[c]
    }

    /// χ(1), the degree.
    pub fn degree(&self, model: &FiniteModel) -> i64 {
        self.value_at(model, model.encode(&vec![0; model.dim]))
            .as_integer()
            .expect("degree of a character is an integer")
    }

    pub fn conj(&self) -> ClassFunction {
        ClassFunction {
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// χ∘τ for a linear automorphism τ of the algebra (e.g. an involution).
    pub fn compose(&self, model: &FiniteModel, tau: &MatFp) -> ClassFunction {
        let cls = model.conjugacy_classes();
        let values = cls
            .reps
            .iter()
            .map(|&r| {
                let img = model.encode(&tau.mul_vec(&model.decode(r)));
                self.value_at(model, img).clone()
            })
            .collect();
        ClassFunction { values }
    }

    pub fn trivial(model: &FiniteModel) -> ClassFunction {
        ClassFunction {
            values: vec![CycInt::one(model.p); model.conjugacy_classes().reps.len()],
        }
    }
}

/// χ = ind_{U′}^U ψ_φ by the coset-sum formula
/// χ(g) = Σ_{xU′} [x⁻¹gx ∈ U′] ψ_φ(x⁻¹gx).
pub fn character_of_induced(
    model: &FiniteModel,
    sub: &SubspaceFp,
    phi: &[u64],
) -> Result<ClassFunction, CharError> {
    check_character(model, phi, sub)?;
    let sg = model.subgroup(sub);
    character_of_induced_with(model, &sg, phi)
}

/// Same, reusing a prebuilt subgroup (coset data is the expensive part).
pub fn character_of_induced_with(
    model: &FiniteModel,
    sg: &Subgroup,
    phi: &[u64],
) -> Result<ClassFunction, CharError> {
    let p = model.p;
    let conj_mats: Vec<MatFp> = sg
        .coset_reps
        .iter()
        .map(|&x| model.adjoint_of(&model.inv(&model.decode(x))))
        .collect();
    let cls = model.conjugacy_classes();
    let mut values = Vec::with_capacity(cls.reps.len());
    for &g in &cls.reps {
        let gv = model.decode(g);
        let mut val = CycInt::zero(p);
        for m in &conj_mats {
            let w = m.mul_vec(&gv);
            if sg.in_sub[model.encode(&w)] {
                val.add_assign(&CycInt::zeta_pow(p, dot_mod(phi, &w, p)));
            }
        }
        values.push(val);
    }
    Ok(ClassFunction { values })
}

/// ⟨c1, c2⟩ = (1/|U|) Σ_g c1(g)·conj(c2(g)), computed classwise.
pub fn inner_product(
    model: &FiniteModel,
    c1: &ClassFunction,
    c2: &ClassFunction,
) -> Result<crate::ratlin::Rat, CharError> {
    let cls = model.conjugacy_classes();
    let mut total = CycInt::zero(model.p);
    for (i, &size) in cls.sizes.iter().enumerate() {
        total.add_assign(&c1.values[i].mul(&c2.values[i].conj()).scale(size as i64));
    }
    let n = total.as_integer().ok_or(CharError::NonRationalResult)?;
    Ok(crate::ratlin::rat(n, model.order as i64))
}

/// ⟨χ, χ⟩ for χ induced from (𝒩′, φ), via Frobenius reciprocity:
/// (1/|U′|) Σ_{h∈U′} conj(ψ_φ(h))·χ(h). Avoids building the class function.
pub fn norm_of_induced(
    model: &FiniteModel,
    sg: &Subgroup,
    phi: &[u64],
) -> Result<i64, CharError> {
    let p = model.p;
    let conj_mats: Vec<MatFp> = sg
        .coset_reps
        .iter()
        .map(|&x| model.adjoint_of(&model.inv(&model.decode(x))))
        .collect();
    // counts[e] = #{(h, x) : x⁻¹hx ∈ U′, φ(x⁻¹hx) − φ(h) = e}
    let mut counts = vec![0i64; p as usize];
    for &h in &sg.members {
        let hv = model.decode(h);
        let base = dot_mod(phi, &hv, p);
        for m in &conj_mats {
            let w = m.mul_vec(&hv);
            if sg.in_sub[model.encode(&w)] {
                let e = sub_mod(dot_mod(phi, &w, p), base, p);
                counts[e as usize] += 1;
            }
        }
    }
    let mut total = CycInt::zero(p);
    for (e, &c) in counts.iter().enumerate() {
        if c != 0 {
            total.add_assign(&CycInt::zeta_pow(p, e as u64).scale(c));
        }
    }
    let exact = total
        .div_exact(sg.order() as i64)
        .ok_or(CharError::InexactDivision)?;
    exact.as_integer().ok_or(CharError::NonRationalResult)
}

/// dim Hom_H(π, triv) = (1/|H|) Σ_{h∈H} χ(h).
pub fn hom_dim(
    model: &FiniteModel,
    chi: &ClassFunction,
    h: &Subgroup,
) -> Result<i64, CharError> {
    let mut total = CycInt::zero(model.p);
    for &g in &h.members {
        total.add_assign(chi.value_at(model, g));
    }
    let exact = total
        .div_exact(h.order() as i64)
        .ok_or(CharError::NonIntegerDim)?;
    let n = exact.as_integer().ok_or(CharError::NonIntegerDim)?;
    if n < 0 {
        return Err(CharError::NonIntegerDim);
    }
    Ok(n)
}

/// Radical of B_φ restricted to a subspace, inside F_p^dim.
pub fn restricted_radical_fp(
    model: &FiniteModel,
    phi: &[u64],
    space: &SubspaceFp,
) -> SubspaceFp {
    let basis = space.basis_vectors();
    let k = basis.len();
    if k == 0 {
        return SubspaceFp::zero(model.p, model.dim);
    }
    let mut g = MatFp::zeros(model.p, k, k);
    for i in 0..k {
        for j in 0..k {
            g.set(i, j, dot_mod(phi, &model.bracket_fp(&basis[i], &basis[j]), model.p));
        }
    }
    let ker = g.kernel();
    let mut vs = Vec::new();
    for c in ker.basis_vectors() {
        let mut v = vec![0u64; model.dim];
        for (a, &ca) in c.iter().enumerate() {
            for t in 0..model.dim {
                v[t] = (v[t] + ca * basis[a][t]) % model.p;
            }
        }
        vs.push(v);
    }
    SubspaceFp::from_spanning(model.p, model.dim, vs)
}

/// Vergne polarization mod p along the adapted flag carried by the model
/// (or a caller-supplied adapted basis, e.g. a σ-stable one).
pub fn vergne_polarization_fp(
    model: &FiniteModel,
    phi: &[u64],
    adapted: &[Vec<u64>],
) -> SubspaceFp {
    let mut pol = SubspaceFp::zero(model.p, model.dim);
    let mut step_vecs: Vec<Vec<u64>> = Vec::new();
    for v in adapted {
        step_vecs.push(v.clone());
        let step = SubspaceFp::from_spanning(model.p, model.dim, step_vecs.clone());
        pol = pol.sum(&restricted_radical_fp(model, phi, &step));
    }
    pol
}

/// An irreducible of the model: a coadjoint orbit representative with its
/// induced character from the mod-p Vergne polarization.
pub struct Irreducible {
    pub phi: Vec<u64>,
    pub orbit_id: u32,
    pub orbit_size: usize,
    pub polarization: SubspaceFp,
    pub chi: ClassFunction,
}

/// All irreducibles, via exhaustive coadjoint-orbit enumeration; also
/// returns the full orbit partition of 𝒩*.
pub fn irreducibles(
    model: &FiniteModel,
) -> Result<(Vec<Irreducible>, super::model::Partition), OracleError> {
    let basis: Vec<Vec<u64>> = (0..model.dim).map(|i| unit(model.dim, i)).collect();
    let gens = model.coadjoint_generators(&basis);
    let part = linear_orbits(model, (0..model.order).collect(), &gens)?;
    let mut irrs = Vec::with_capacity(part.reps.len());
    for (id, &rep) in part.reps.iter().enumerate() {
        let phi = model.decode(rep);
        let pol = vergne_polarization_fp(model, &phi, &model.flag_adapted);
        let chi = character_of_induced(model, &pol, &phi)
            .expect("Vergne polarization always carries a character");
        irrs.push(Irreducible {
            phi,
            orbit_id: id as u32,
            orbit_size: part.sizes[id],
            polarization: pol,
            chi,
        });
    }
    Ok((irrs, part))
}

/// The "good" condition: the central character of an irreducible of the
/// codimension-one subgroup U₀ is trivial on exp(F·Y). `submodel` is the
/// model of 𝒩₀ and `y` the frame vector Y in its coordinates.
pub fn is_good(submodel: &FiniteModel, chi0: &ClassFunction, y: &[u64]) -> bool {
    let one = chi0.value_at(submodel, submodel.encode(&vec![0; submodel.dim]));
    for t in 1..submodel.p {
        let ty: Vec<u64> = y.iter().map(|&c| c * t % submodel.p).collect();
        if chi0.value_at(submodel, submodel.encode(&ty)) != one {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::model::reduce_mod_p;
    use crate::nilpotent::catalog;
    use num_traits::ToPrimitive;

    fn h3_mod3() -> FiniteModel {
        reduce_mod_p(&catalog("h3").unwrap(), 3).unwrap()
    }

    #[test]
    fn psi_values_and_multiplicativity() {
        let m = h3_mod3();
        let l = SubspaceFp::from_spanning(3, 3, vec![unit(3, 1), unit(3, 2)]);
        let phi = vec![0, 0, 1];
        assert_eq!(
            psi_phi(&m, &phi, &l, &[0, 0, 0]).unwrap(),
            CycInt::one(3)
        );
        assert_eq!(
            psi_phi(&m, &phi, &l, &[0, 0, 1]).unwrap(),
            CycInt::zeta_pow(3, 1)
        );
        // exhaustive multiplicativity on the 9 elements of L(F₃)
        for a in l.elements() {
            for b in l.elements() {
                let ab = m.mul(&a, &b);
                assert_eq!(
                    psi_phi(&m, &phi, &l, &ab).unwrap(),
                    psi_phi(&m, &phi, &l, &a)
                        .unwrap()
                        .mul(&psi_phi(&m, &phi, &l, &b).unwrap())
                );
            }
        }
    }

    #[test]
    fn psi_rejects_non_characters() {
        let m = h3_mod3();
        let full = SubspaceFp::full(3, 3);
        // φ = Z* does not kill [e₁,e₂] = e₃
        assert!(matches!(
            psi_phi(&m, &[0, 0, 1], &full, &[0, 0, 0]),
            Err(CharError::NotACharacter(_, _))
        ));
    }

    #[test]
    fn induced_from_lagrangian_h3() {
        let m = h3_mod3();
        let l = SubspaceFp::from_spanning(3, 3, vec![unit(3, 1), unit(3, 2)]);
        let chi = character_of_induced(&m, &l, &[0, 0, 1]).unwrap();
        assert_eq!(chi.degree(&m), 3);
        // on the center: χ(exp(z e₃)) = 3ζ^z
        for z in 1..3u64 {
            let v = chi.value_at(&m, m.encode(&[0, 0, z]));
            assert_eq!(*v, CycInt::zeta_pow(3, z).scale(3));
        }
        // off the center: 0
        assert!(chi.value_at(&m, m.encode(&[1, 0, 0])).is_zero());
        assert!(chi.value_at(&m, m.encode(&[0, 1, 2])).is_zero());
        // irreducible
        assert_eq!(inner_product(&m, &chi, &chi).unwrap(), crate::ratlin::rint(1));
    }

    #[test]
    fn induced_from_center_reducible() {
        let m = h3_mod3();
        let z = SubspaceFp::from_spanning(3, 3, vec![unit(3, 2)]);
        let chi = character_of_induced(&m, &z, &[0, 0, 1]).unwrap();
        assert_eq!(chi.degree(&m), 9);
        // Ind from the center is 3 copies of one degree-3 irreducible,
        // so the norm is sum of squared multiplicities = 9.
        assert_eq!(inner_product(&m, &chi, &chi).unwrap(), crate::ratlin::rint(9));
        let sg = m.subgroup(&z);
        assert_eq!(norm_of_induced(&m, &sg, &[0, 0, 1]).unwrap(), 9);
    }

    #[test]
    fn inducing_from_whole_group() {
        let m = h3_mod3();
        let full = SubspaceFp::full(3, 3);
        // φ = X* kills [𝒩,𝒩] = span(e₃), so ψ_φ is a character of U itself
        let chi = character_of_induced(&m, &full, &[1, 0, 0]).unwrap();
        assert_eq!(chi.degree(&m), 1);
        for g in 0..m.order {
            let gv = m.decode(g);
            assert_eq!(
                *chi.value_at(&m, g),
                CycInt::zeta_pow(3, dot_mod(&[1, 0, 0], &gv, 3))
            );
        }
    }

    #[test]
    fn trivial_inner_product() {
        let m = h3_mod3();
        let t = ClassFunction::trivial(&m);
        assert_eq!(inner_product(&m, &t, &t).unwrap(), crate::ratlin::rint(1));
    }

    #[test]
    fn hom_dims_h3() {
        let m = h3_mod3();
        let fixed = SubspaceFp::from_spanning(3, 3, vec![unit(3, 1)]);
        let usigma = m.subgroup(&fixed);
        let l = SubspaceFp::from_spanning(3, 3, vec![unit(3, 1), unit(3, 2)]);
        let chi = character_of_induced(&m, &l, &[0, 0, 1]).unwrap();
        assert_eq!(hom_dim(&m, &chi, &usigma).unwrap(), 1);
        // ψ_{Y*} is a linear character nontrivial on U^σ = exp(F e₂)
        let psi_y = character_of_induced(&m, &SubspaceFp::full(3, 3), &[0, 1, 0]).unwrap();
        assert_eq!(hom_dim(&m, &psi_y, &usigma).unwrap(), 0);
        assert_eq!(hom_dim(&m, &ClassFunction::trivial(&m), &usigma).unwrap(), 1);
    }

    #[test]
    fn irreducibles_h3_sum_of_squares() {
        let m = h3_mod3();
        let (irrs, part) = irreducibles(&m).unwrap();
        assert_eq!(irrs.len(), 11);
        assert_eq!(part.reps.len(), 11);
        let sum: i64 = irrs.iter().map(|i| i.chi.degree(&m).pow(2)).sum();
        assert_eq!(sum, 27);
        // each induced character is irreducible
        for i in &irrs {
            assert_eq!(
                inner_product(&m, &i.chi, &i.chi)
                    .unwrap()
                    .to_integer()
                    .to_i64()
                    .unwrap(),
                1
            );
        }
    }

    #[test]
    fn goodness_examples() {
        // In H₃ itself, take U₀ = exp(𝒩₀) with 𝒩₀ = span(Y, Z) abelian.
        // Model 𝒩₀ directly as abelian_2 with coordinates (Y, Z).
        let sub = reduce_mod_p(&catalog("abelian_2").unwrap(), 3).unwrap();
        let y = vec![1, 0];
        let full = SubspaceFp::full(3, 2);
        let chi_z = character_of_induced(&sub, &full, &[0, 1]).unwrap();
        assert!(is_good(&sub, &chi_z, &y));
        let chi_yz = character_of_induced(&sub, &full, &[1, 1]).unwrap();
        assert!(!is_good(&sub, &chi_yz, &y));
        assert!(is_good(&sub, &ClassFunction::trivial(&sub), &y));
    }
}
