//! The unipotent group in exponential coordinates: elements are logarithms,
//! multiplication is the Baker–Campbell–Hausdorff series truncated at the
//! nilpotency class, with exact rational coefficients.

use crate::nilpotent::LieAlgebra;
use crate::ratlin::*;
use crate::symmetric::Involution;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("algebra class {0} exceeds the BCH table bound {1}")]
    ClassTooHigh(usize, usize),
}

/// A group element, stored as its logarithm in the algebra basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub coords: Vec<Rat>,
}

impl GroupElement {
    pub fn new(coords: Vec<Rat>) -> Self {
        GroupElement { coords }
    }

    pub fn identity(dim: usize) -> Self {
        GroupElement {
            coords: zero_vec(dim),
        }
    }

    pub fn is_identity(&self) -> bool {
        is_zero_vec(&self.coords)
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            coords: neg_vec(&self.coords),
        }
    }
}

/// One letter of a BCH word.
pub type BchWord = Vec<bool>; // false = X, true = Y

/// The BCH series `log(exp X exp Y)` through a fixed degree, as exact
/// rational coefficients of right-nested commutator words
/// `[w_1,[w_2,[…,w_m]]]`.
#[derive(Debug, Clone)]
pub struct BchTable {
    pub class_bound: usize,
    pub terms: Vec<(Rat, BchWord)>,
}

impl BchTable {
    /// Dynkin's expansion: sum over block sequences `(r_i, s_i)` with
    /// `r_i + s_i ≥ 1` of
    /// `(-1)^{n-1}/n · [X^{r_1} Y^{s_1} … ] / ((Σ r_i+s_i) · Π r_i! s_i!)`.
    pub fn new(class_bound: usize) -> Self {
        let mut coeffs: HashMap<BchWord, Rat> = HashMap::new();
        let mut blocks: Vec<(usize, usize)> = Vec::new();
        collect_blocks(class_bound, 0, &mut blocks, &mut coeffs);
        let mut terms: Vec<(Rat, BchWord)> = coeffs
            .into_iter()
            .filter(|(word, c)| !c.is_zero() && !trivially_zero(word))
            .map(|(w, c)| (c, w))
            .collect();
        terms.sort_by(|a, b| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1)));
        BchTable { class_bound, terms }
    }

    /// Evaluates `log(exp x · exp y)` in the given algebra.
    pub fn eval(&self, alg: &LieAlgebra, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(alg.dim);
        for (c, word) in &self.terms {
            if word.len() > alg.class {
                break;
            }
            // Right-nested commutator of the word letters.
            let letter = |b: bool| if b { y } else { x };
            let mut v = letter(word[word.len() - 1]).to_vec();
            for &l in word[..word.len() - 1].iter().rev() {
                v = alg.bracket(letter(l), &v);
                if is_zero_vec(&v) {
                    break;
                }
            }
            if !is_zero_vec(&v) {
                for k in 0..alg.dim {
                    let add = c * &v[k];
                    out[k] += add;
                }
            }
        }
        out
    }
}

fn trivially_zero(word: &BchWord) -> bool {
    // [l, l] at the innermost position kills the nested bracket.
    let n = word.len();
    n >= 2 && word[n - 1] == word[n - 2]
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn collect_blocks(
    bound: usize,
    degree: usize,
    blocks: &mut Vec<(usize, usize)>,
    coeffs: &mut HashMap<BchWord, Rat>,
) {
    if !blocks.is_empty() {
        let n = blocks.len();
        let total = degree;
        let mut denom = BigInt::from(n as u64) * BigInt::from(total as u64);
        let mut word = Vec::with_capacity(total);
        for &(r, s) in blocks.iter() {
            denom *= factorial(r) * factorial(s);
            word.extend(std::iter::repeat(false).take(r));
            word.extend(std::iter::repeat(true).take(s));
        }
        let sign = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        *coeffs.entry(word).or_insert_with(Rat::zero) += Rat::new(sign, denom);
    }
    if degree == bound {
        return;
    }
    for r in 0..=(bound - degree) {
        for s in 0..=(bound - degree - r) {
            if r + s == 0 {
                continue;
            }
            blocks.push((r, s));
            collect_blocks(bound, degree + r + s, blocks, coeffs);
            blocks.pop();
        }
    }
}

/// `u · v` via the BCH series.
pub fn bch_multiply(
    alg: &LieAlgebra,
    u: &GroupElement,
    v: &GroupElement,
) -> Result<GroupElement, GroupError> {
    let table = alg.bch_table();
    if alg.class > table.class_bound {
        return Err(GroupError::ClassTooHigh(alg.class, table.class_bound));
    }
    Ok(GroupElement::new(table.eval(alg, &u.coords, &v.coords)))
}

/// Infallible product for algebras whose table was built from their own class.
pub fn multiply(alg: &LieAlgebra, u: &GroupElement, v: &GroupElement) -> GroupElement {
    bch_multiply(alg, u, v).expect("table bound matches algebra class")
}

/// `Ad(u) = exp(ad(ln u))`, a unipotent matrix.
pub fn adjoint(alg: &LieAlgebra, u: &GroupElement) -> Mat {
    let ad = alg.ad(&u.coords);
    let mut acc = Mat::identity(alg.dim);
    let mut pow = Mat::identity(alg.dim);
    let mut fact = BigInt::one();
    for k in 1..=alg.class.max(1) {
        pow = ad.mul(&pow);
        if pow.is_zero() {
            break;
        }
        fact *= BigInt::from(k);
        acc = acc.add(&pow.scale(&Rat::new(BigInt::one(), fact.clone())));
    }
    acc
}

/// A linear form on the algebra, in dual-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub coords: Vec<Rat>,
}

impl LinearForm {
    pub fn new(coords: Vec<Rat>) -> Self {
        LinearForm { coords }
    }

    pub fn zero(dim: usize) -> Self {
        LinearForm {
            coords: zero_vec(dim),
        }
    }

    pub fn eval(&self, v: &[Rat]) -> Rat {
        dot(&self.coords, v)
    }
}

/// Coadjoint action `(u.φ)(X) = φ(Ad(u)^{-1} X)`.
pub fn coadjoint(alg: &LieAlgebra, u: &GroupElement, phi: &LinearForm) -> LinearForm {
    let ad_inv = adjoint(alg, &u.inverse());
    // (u.φ)_i = φ(Ad(u^{-1}) e_i) = Σ_j φ_j · Ad(u^{-1})_{ji}
    LinearForm::new(ad_inv.transpose().mul_vec(&phi.coords))
}

/// The unique square root: `exp(½ ln u)`.
pub fn sqrt(u: &GroupElement) -> GroupElement {
    GroupElement::new(scale_vec(&rat(1, 2), &u.coords))
}

/// Polar decomposition `u = u⁺ u⁻` with `σ(u⁺) = u⁺` and `σ(u⁻) = (u⁻)⁻¹`:
/// `u⁻ = sqrt(σ(u)⁻¹ u)`, `u⁺ = u (u⁻)⁻¹`.
pub fn polar_decompose(
    alg: &LieAlgebra,
    sigma: &Involution,
    u: &GroupElement,
) -> (GroupElement, GroupElement) {
    let su = sigma.apply_group(u);
    let v = multiply(alg, &su.inverse(), u);
    let uminus = sqrt(&v);
    let uplus = multiply(alg, u, &uminus.inverse());
    (uplus, uminus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::catalog;

    fn ge(v: Vec<i64>) -> GroupElement {
        GroupElement::new(v.into_iter().map(rint).collect())
    }

    #[test]
    fn table_degree_one_and_two() {
        let t = BchTable::new(2);
        let get = |w: &[bool]| -> Rat {
            t.terms
                .iter()
                .find(|(_, word)| word == w)
                .map(|(c, _)| c.clone())
                .unwrap_or_else(Rat::zero)
        };
        assert_eq!(get(&[false]), rint(1)); // X
        assert_eq!(get(&[true]), rint(1)); // Y
        // ½[X,Y]: word XY carries ¼ and YX carries −¼; [YX] = −[XY].
        assert_eq!(get(&[false, true]) - get(&[true, false]), rat(1, 2));
    }

    #[test]
    fn h3_multiplication_closed_form() {
        let n = catalog("h3").unwrap();
        // exp(xX+yY+zZ)·exp(x'X+y'Y+z'Z) = exp((x+x')X+(y+y')Y+(z+z'+½(xy'-yx'))Z)
        let u = GroupElement::new(vec![rint(1), rint(2), rint(3)]);
        let v = GroupElement::new(vec![rint(5), rint(7), rint(11)]);
        let p = multiply(&n, &u, &v);
        assert_eq!(p.coords, vec![rint(6), rint(9), rint(14) + rat(7 - 10, 2)]);
    }

    #[test]
    fn identity_and_inverse() {
        let n = catalog("filiform4").unwrap();
        let u = ge(vec![1, -2, 3, 5]);
        let e = GroupElement::identity(4);
        assert_eq!(multiply(&n, &u, &e), u);
        assert_eq!(multiply(&n, &e, &u), u);
        assert!(multiply(&n, &u, &u.inverse()).is_identity());
    }

    #[test]
    fn associativity_exact() {
        for name in ["filiform4", "ut4", "h5"] {
            let n = catalog(name).unwrap();
            let d = n.dim;
            let v1 = GroupElement::new((0..d).map(|i| rat(i as i64 + 1, 2)).collect());
            let v2 = GroupElement::new((0..d).map(|i| rat(3 - i as i64, 5)).collect());
            let v3 = GroupElement::new((0..d).map(|i| rint(i as i64 * i as i64 - 2)).collect());
            let lhs = multiply(&n, &multiply(&n, &v1, &v2), &v3);
            let rhs = multiply(&n, &v1, &multiply(&n, &v2, &v3));
            assert_eq!(lhs, rhs, "{name}");
        }
    }

    #[test]
    fn adjoint_identity_and_h3() {
        let n = catalog("h3").unwrap();
        assert_eq!(adjoint(&n, &GroupElement::identity(3)), Mat::identity(3));
        // u = exp(tY): Ad(u)X = X - tZ, fixes Y and Z.
        let t = rint(4);
        let u = GroupElement::new(vec![rint(0), t.clone(), rint(0)]);
        let m = adjoint(&n, &u);
        assert_eq!(m.mul_vec(&unit_vec(3, 0)), vec![rint(1), rint(0), -t]);
        assert_eq!(m.mul_vec(&unit_vec(3, 1)), unit_vec(3, 1));
        assert_eq!(m.mul_vec(&unit_vec(3, 2)), unit_vec(3, 2));
    }

    #[test]
    fn adjoint_is_multiplicative() {
        let n = catalog("h5").unwrap();
        let u = ge(vec![1, 2, -1, 3, 0]);
        let v = ge(vec![0, -2, 5, 1, 7]);
        let uv = multiply(&n, &u, &v);
        assert_eq!(adjoint(&n, &uv), adjoint(&n, &u).mul(&adjoint(&n, &v)));
    }

    #[test]
    fn coadjoint_examples() {
        let n = catalog("h3").unwrap();
        let zstar = LinearForm::new(vec![rint(0), rint(0), rint(1)]);
        let id = GroupElement::identity(3);
        assert_eq!(coadjoint(&n, &id, &zstar), zstar);
        // u = exp(tY), φ = Z* → Z* + tX*
        let t = rint(6);
        let u = GroupElement::new(vec![rint(0), t.clone(), rint(0)]);
        let moved = coadjoint(&n, &u, &zstar);
        assert_eq!(moved.coords, vec![t, rint(0), rint(1)]);
        // central value is invariant for any u
        let w = ge(vec![3, -4, 9]);
        assert_eq!(coadjoint(&n, &w, &zstar).coords[2], rint(1));
    }

    #[test]
    fn coadjoint_is_left_action() {
        let n = catalog("ut4").unwrap();
        let u = ge(vec![1, 0, 2, -1, 3, 0]);
        let v = ge(vec![0, 1, -2, 0, 1, 5]);
        let phi = LinearForm::new((0..6).map(|i| rat(i as i64 - 3, 2)).collect());
        let lhs = coadjoint(&n, &multiply(&n, &u, &v), &phi);
        let rhs = coadjoint(&n, &u, &coadjoint(&n, &v, &phi));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sqrt_squares_back() {
        let n = catalog("filiform4").unwrap();
        let u = ge(vec![3, -5, 7, 2]);
        let w = sqrt(&u);
        assert_eq!(multiply(&n, &w, &w), u);
        assert!(sqrt(&GroupElement::identity(4)).is_identity());
    }
}
