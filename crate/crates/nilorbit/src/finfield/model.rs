//! Finite models U(F_p): the Lazard transfer of a rational nilpotent Lie
//! algebra to a finite group of order p^dim via the BCH law, valid when the
//! nilpotency class is < p. Group elements are logarithm coordinate vectors
//! mod p, encoded as mixed-radix indices.

use super::modp::*;
use crate::group::BchWord;
use crate::nilpotent::LieAlgebra;
use crate::ratlin::{BigInt, Rat};
use num_traits::Signed;
use once_cell::sync::OnceCell;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} too small: nilpotency class {class} must be < p")]
    PrimeTooSmall { p: u64, class: usize },
    #[error("denominator divisible by {0} in rational data")]
    BadDenominator(u64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration budget exceeded: {0} points")]
    BudgetExceeded(usize),
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    let digits = r.to_u64_digits().1;
    digits.first().copied().unwrap_or(0)
}

/// Image of a rational in F_p; errors when p divides the denominator.
pub fn reduce_rat(r: &Rat, p: u64) -> Result<u64, ModelError> {
    let den = bigint_mod(r.denom(), p);
    if den == 0 {
        return Err(ModelError::BadDenominator(p));
    }
    let num = bigint_mod(&r.numer().abs(), p);
    let v = num * inv_mod(den, p) % p;
    Ok(if r.numer().is_negative() { (p - v) % p } else { v })
}

pub fn reduce_vec(v: &[Rat], p: u64) -> Result<Vec<u64>, ModelError> {
    v.iter().map(|r| reduce_rat(r, p)).collect()
}

pub fn reduce_mat(m: &crate::ratlin::Mat, p: u64) -> Result<MatFp, ModelError> {
    let mut rows = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        rows.push(reduce_vec(m.row(i), p)?);
    }
    if rows.is_empty() {
        return Ok(MatFp::zeros(p, 0, m.cols));
    }
    Ok(MatFp::from_rows(p, rows))
}

/// Orbit partition of a linear group action on F_p^dim.
#[derive(Clone, Debug)]
pub struct Partition {
    /// element index → orbit id; u32::MAX outside the domain
    pub orbit_of: Vec<u32>,
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
}

#[derive(Debug)]
pub struct FiniteModel {
    pub p: u64,
    pub dim: usize,
    pub class: usize,
    pub order: usize,
    pub brackets: Vec<Vec<Vec<u64>>>,
    bch_terms: Vec<(u64, BchWord)>,
    /// adapted basis of a complete flag of ideals, reduced mod p
    pub flag_adapted: Vec<Vec<u64>>,
    classes: OnceCell<Partition>,
}

pub fn reduce_mod_p(alg: &LieAlgebra, p: u64) -> Result<FiniteModel, ModelError> {
    if !is_prime(p) {
        return Err(ModelError::NotPrime(p));
    }
    if alg.class >= p as usize {
        return Err(ModelError::PrimeTooSmall {
            p,
            class: alg.class,
        });
    }
    let mut brackets = vec![vec![vec![0u64; alg.dim]; alg.dim]; alg.dim];
    for i in 0..alg.dim {
        for j in 0..alg.dim {
            brackets[i][j] = reduce_vec(&alg.brackets[i][j], p)?;
        }
    }
    let mut bch_terms = Vec::new();
    for (c, word) in &alg.bch_table().terms {
        let cr = reduce_rat(c, p)?; // denominators only involve primes ≤ class
        if cr != 0 {
            bch_terms.push((cr, word.clone()));
        }
    }
    let mut flag_adapted = Vec::new();
    for v in alg.jordan_holder_flag(None).adapted_basis() {
        flag_adapted.push(reduce_vec(&v, p)?);
    }
    Ok(FiniteModel {
        p,
        dim: alg.dim,
        class: alg.class,
        order: (p as usize).pow(alg.dim as u32),
        brackets,
        bch_terms,
        flag_adapted,
        classes: OnceCell::new(),
    })
}

impl FiniteModel {
    pub fn encode(&self, v: &[u64]) -> usize {
        let mut idx = 0usize;
        for &c in v.iter().rev() {
            idx = idx * self.p as usize + (c % self.p) as usize;
        }
        idx
    }

    pub fn decode(&self, mut idx: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.dim];
        for x in v.iter_mut() {
            *x = (idx % self.p as usize) as u64;
            idx /= self.p as usize;
        }
        v
    }

    pub fn bracket_fp(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.dim];
        for i in 0..self.dim {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.dim {
                if y[j] == 0 {
                    continue;
                }
                let c = x[i] * y[j] % p;
                for k in 0..self.dim {
                    let b = self.brackets[i][j][k];
                    if b != 0 {
                        out[k] = (out[k] + c * b) % p;
                    }
                }
            }
        }
        out
    }

    /// Group law: BCH series mod p.
    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.dim];
        for (c, word) in &self.bch_terms {
            if word.len() > self.class {
                break;
            }
            let letter = |b: bool| if b { y } else { x };
            let mut v = letter(word[word.len() - 1]).to_vec();
            for &l in word[..word.len() - 1].iter().rev() {
                v = self.bracket_fp(letter(l), &v);
                if v.iter().all(|&a| a == 0) {
                    break;
                }
            }
            for k in 0..self.dim {
                if v[k] != 0 {
                    out[k] = (out[k] + c * v[k]) % p;
                }
            }
        }
        out
    }

    pub fn inv(&self, x: &[u64]) -> Vec<u64> {
        x.iter().map(|&a| (self.p - a % self.p) % self.p).collect()
    }

    pub fn ad_matrix(&self, x: &[u64]) -> MatFp {
        let mut m = MatFp::zeros(self.p, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket_fp(x, &unit(self.dim, j));
            for i in 0..self.dim {
                m.set(i, j, col[i]);
            }
        }
        m
    }

    /// Ad(exp x) = exp(ad x) mod p; k! is invertible for k ≤ class < p.
    pub fn adjoint_of(&self, x: &[u64]) -> MatFp {
        let ad = self.ad_matrix(x);
        let mut acc = MatFp::identity(self.p, self.dim);
        let mut pow = MatFp::identity(self.p, self.dim);
        let mut fact = 1u64;
        for k in 1..=self.class.max(1) as u64 {
            pow = ad.mul(&pow);
            if pow.data.iter().all(|&a| a == 0) {
                break;
            }
            fact = fact * (k % self.p) % self.p;
            acc = acc.add(&pow.scale(inv_mod(fact, self.p)));
        }
        acc
    }

    /// Matrix of the coadjoint action of exp(x) on forms: Ad(exp(−x))ᵀ.
    pub fn coadjoint_matrix_of(&self, x: &[u64]) -> MatFp {
        self.adjoint_of(&self.inv(x)).transpose()
    }

    pub fn coadjoint(&self, x: &[u64], phi: &[u64]) -> Vec<u64> {
        self.coadjoint_matrix_of(x).mul_vec(phi)
    }

    /// Generator matrices for the coadjoint action of the subgroup
    /// exp(span(basis)): exp(±b) for each basis vector.
    pub fn coadjoint_generators(&self, basis: &[Vec<u64>]) -> Vec<MatFp> {
        let mut gens = Vec::new();
        for b in basis {
            gens.push(self.coadjoint_matrix_of(b));
            gens.push(self.coadjoint_matrix_of(&self.inv(b)));
        }
        gens
    }

    /// Conjugacy classes: orbits of conjugation, which is linear on logarithm
    /// coordinates (g ↦ Ad(x)·g).
    pub fn conjugacy_classes(&self) -> &Partition {
        self.classes.get_or_init(|| {
            let mut gens = Vec::new();
            for i in 0..self.dim {
                let e = unit(self.dim, i);
                gens.push(self.adjoint_of(&e));
                gens.push(self.adjoint_of(&self.inv(&e)));
            }
            linear_orbits(self, (0..self.order).collect(), &gens)
                .expect("conjugacy enumeration within budget by construction")
        })
    }

    /// The subgroup exp of a subalgebra (as a subspace closed under the
    /// bracket), with left-coset data for the whole group.
    pub fn subgroup(&self, space: &SubspaceFp) -> Subgroup {
        let basis = space.basis_vectors();
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                debug_assert!(space.contains(&self.bracket_fp(a, b)));
            }
        }
        let mut members: Vec<usize> = space.elements().iter().map(|v| self.encode(v)).collect();
        members.sort_unstable();
        let mut in_sub = vec![false; self.order];
        for &m in &members {
            in_sub[m] = true;
        }
        let mut coset_of = vec![u32::MAX; self.order];
        let mut coset_reps = Vec::new();
        let member_vecs: Vec<Vec<u64>> = members.iter().map(|&m| self.decode(m)).collect();
        for g in 0..self.order {
            if coset_of[g] != u32::MAX {
                continue;
            }
            let id = coset_reps.len() as u32;
            coset_reps.push(g);
            let gv = self.decode(g);
            for u in &member_vecs {
                let h = self.encode(&self.mul(&gv, u));
                debug_assert_eq!(coset_of[h], u32::MAX);
                coset_of[h] = id;
            }
        }
        Subgroup {
            space: space.clone(),
            members,
            in_sub,
            coset_reps,
            coset_of,
        }
    }
}

/// A subgroup with membership bitmap and left cosets gU′ of the full group.
pub struct Subgroup {
    pub space: SubspaceFp,
    pub members: Vec<usize>,
    pub in_sub: Vec<bool>,
    pub coset_reps: Vec<usize>,
    pub coset_of: Vec<u32>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }
}

const ORBIT_BUDGET: usize = 2_000_000;

/// Orbit partition of `points` (element indices) under the group generated by
/// linear maps `gens` on coordinate vectors mod p.
pub fn linear_orbits(
    model: &FiniteModel,
    points: Vec<usize>,
    gens: &[MatFp],
) -> Result<Partition, OracleError> {
    if points.len() > ORBIT_BUDGET {
        return Err(OracleError::BudgetExceeded(points.len()));
    }
    let mut orbit_of = vec![u32::MAX; model.order];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let in_domain = {
        let mut b = vec![false; model.order];
        for &pt in &points {
            b[pt] = true;
        }
        b
    };
    for &start in &points {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(start);
        let mut stack = vec![start];
        orbit_of[start] = id;
        let mut size = 0usize;
        while let Some(x) = stack.pop() {
            size += 1;
            let xv = model.decode(x);
            for g in gens {
                let y = model.encode(&g.mul_vec(&xv));
                debug_assert!(in_domain[y], "action left the declared domain");
                if orbit_of[y] == u32::MAX {
                    orbit_of[y] = id;
                    stack.push(y);
                }
            }
        }
        sizes.push(size);
    }
    Ok(Partition {
        orbit_of,
        reps,
        sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::catalog;

    #[test]
    fn reduce_guards() {
        let h3 = catalog("h3").unwrap();
        assert!(reduce_mod_p(&h3, 3).is_ok());
        assert_eq!(
            reduce_mod_p(&h3, 2).unwrap_err(),
            ModelError::PrimeTooSmall { p: 2, class: 2 }
        );
        assert_eq!(reduce_mod_p(&h3, 4).unwrap_err(), ModelError::NotPrime(4));
        let f4 = catalog("filiform4").unwrap();
        assert_eq!(
            reduce_mod_p(&f4, 3).unwrap_err(),
            ModelError::PrimeTooSmall { p: 3, class: 3 }
        );
        assert_eq!(reduce_mod_p(&f4, 5).unwrap().order, 625);
        let ut4 = catalog("ut4").unwrap();
        assert_eq!(reduce_mod_p(&ut4, 5).unwrap().order, 15625);
    }

    #[test]
    fn reduce_rat_values() {
        use crate::ratlin::{rat, rint};
        assert_eq!(reduce_rat(&rint(-1), 5).unwrap(), 4);
        assert_eq!(reduce_rat(&rat(1, 2), 5).unwrap(), 3);
        assert_eq!(
            reduce_rat(&rat(1, 5), 5).unwrap_err(),
            ModelError::BadDenominator(5)
        );
    }

    #[test]
    fn group_law_h3_mod3() {
        let m = reduce_mod_p(&catalog("h3").unwrap(), 3).unwrap();
        // (a,b,c)·(a',b',c') = (a+a', b+b', c+c'+(ab'−a'b)/2)
        let x = vec![1, 0, 0];
        let y = vec![0, 1, 0];
        let xy = m.mul(&x, &y);
        let yx = m.mul(&y, &x);
        // difference in the central slot is [x,y] = e3
        assert_eq!(m.mul(&m.inv(&yx), &xy), vec![0, 0, 1]);
        // associativity spot checks over all of a small slice
        for a in 0..27usize {
            for b in [3usize, 7, 20] {
                let (av, bv) = (m.decode(a), m.decode(b));
                let ab = m.mul(&av, &bv);
                assert_eq!(m.mul(&m.inv(&ab), &ab), vec![0, 0, 0]);
            }
        }
    }

    #[test]
    fn full_associativity_h3_mod3() {
        let m = reduce_mod_p(&catalog("h3").unwrap(), 3).unwrap();
        for a in 0..27usize {
            for b in 0..27usize {
                for c in [0usize, 5, 13, 26] {
                    let (av, bv, cv) = (m.decode(a), m.decode(b), m.decode(c));
                    assert_eq!(
                        m.mul(&m.mul(&av, &bv), &cv),
                        m.mul(&av, &m.mul(&bv, &cv))
                    );
                }
            }
        }
    }

    #[test]
    fn conjugacy_classes_h3_mod3() {
        let m = reduce_mod_p(&catalog("h3").unwrap(), 3).unwrap();
        let cls = m.conjugacy_classes();
        // center (9 elements) is 9 singleton classes; the rest split into
        // classes of size 3: 9 + 18/... = 9 + (27−9)/3 ... sizes sum to 27
        let total: usize = cls.sizes.iter().sum();
        assert_eq!(total, 27);
        let singletons = cls.sizes.iter().filter(|&&s| s == 1).count();
        assert_eq!(singletons, 3); // center = exp(F₃ e₃)
        assert_eq!(cls.reps.len(), 11); // 3 + 24/3 = 11 classes = #Irr
    }

    #[test]
    fn subgroup_cosets_h3() {
        let m = reduce_mod_p(&catalog("h3").unwrap(), 3).unwrap();
        let l = SubspaceFp::from_spanning(3, 3, vec![unit(3, 1), unit(3, 2)]);
        let sg = m.subgroup(&l);
        assert_eq!(sg.order(), 9);
        assert_eq!(sg.index(), 3);
        // cosets partition the group evenly
        let mut counts = vec![0usize; sg.index()];
        for g in 0..m.order {
            counts[sg.coset_of[g] as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c == 9));
    }

    #[test]
    fn coadjoint_orbits_h3_mod3() {
        let m = reduce_mod_p(&catalog("h3").unwrap(), 3).unwrap();
        let basis: Vec<Vec<u64>> = (0..3).map(|i| unit(3, i)).collect();
        let gens = m.coadjoint_generators(&basis);
        let part = linear_orbits(&m, (0..m.order).collect(), &gens).unwrap();
        // 9 singleton orbits (φ(Z)=0) plus two orbits of size 9
        assert_eq!(part.reps.len(), 11);
        let mut sizes = part.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(&sizes[..9], &[1; 9]);
        assert_eq!(&sizes[9..], &[9, 9]);
    }
}
