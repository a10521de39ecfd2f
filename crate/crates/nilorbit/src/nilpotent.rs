//! Nilpotent Lie algebras over `Q` presented by structure constants, with
//! ideals, quotients, central series, flags, and a small catalog.

use crate::ratlin::*;
use crate::symmetric::Involution;
use num_traits::Zero;
use once_cell::sync::OnceCell;
use thiserror::Error;

use crate::group::BchTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("bracket table is not antisymmetric at ({0},{1})")]
    NotAntisymmetric(usize, usize),
    #[error("Jacobi identity fails on basis triple ({0},{1},{2})")]
    JacobiViolation(usize, usize, usize),
    #[error("algebra is not nilpotent (lower central series stabilizes at dimension {0})")]
    NotNilpotent(usize),
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("bad bracket table shape")]
    BadShape,
    #[error("bad input: {0}")]
    BadInput(String),
}

/// A nilpotent Lie algebra given by its structure constants: `brackets[i][j]`
/// holds the coordinates of `[e_i, e_j]`.
#[derive(Debug)]
pub struct LieAlgebra {
    pub dim: usize,
    pub labels: Vec<String>,
    pub brackets: Vec<Vec<Vec<Rat>>>,
    pub class: usize,
    bch: OnceCell<BchTable>,
}

impl Clone for LieAlgebra {
    fn clone(&self) -> Self {
        LieAlgebra {
            dim: self.dim,
            labels: self.labels.clone(),
            brackets: self.brackets.clone(),
            class: self.class,
            bch: OnceCell::new(),
        }
    }
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.brackets == other.brackets
    }
}

/// A subalgebra (or ideal) of a parent algebra, as a canonicalized subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subalgebra {
    pub space: Subspace,
    pub is_ideal: bool,
}

/// A complete flag of ideals `0 = N_0 ⊂ N_1 ⊂ … ⊂ N_n`, one dimension at a
/// time. `steps[i]` has dimension `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub steps: Vec<Subspace>,
}

impl Flag {
    /// Basis adapted to the flag: the `j`-th vector spans `steps[j+1]` over
    /// `steps[j]`.
    pub fn adapted_basis(&self) -> Vec<Vec<Rat>> {
        let mut out = Vec::new();
        for i in 1..self.steps.len() {
            let mut news = self.steps[i - 1].complement_within(&self.steps[i]);
            assert_eq!(news.len(), 1, "flag steps must grow by one dimension");
            out.push(news.pop().unwrap());
        }
        out
    }
}

impl LieAlgebra {
    /// Builds and validates an algebra from its bracket table.
    pub fn new(labels: Vec<String>, brackets: Vec<Vec<Vec<Rat>>>) -> Result<Self, AlgebraError> {
        let dim = labels.len();
        if brackets.len() != dim
            || brackets
                .iter()
                .any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim))
        {
            return Err(AlgebraError::BadShape);
        }
        let mut alg = LieAlgebra {
            dim,
            labels,
            brackets,
            class: 0,
            bch: OnceCell::new(),
        };
        alg.class = alg.validate()?;
        Ok(alg)
    }

    /// Checks antisymmetry, the Jacobi identity, and nilpotency; returns the
    /// nilpotency class.
    pub fn validate(&self) -> Result<usize, AlgebraError> {
        for i in 0..self.dim {
            for j in i..self.dim {
                let s = add_vec(&self.brackets[i][j], &self.brackets[j][i]);
                if !is_zero_vec(&s) {
                    return Err(AlgebraError::NotAntisymmetric(i, j));
                }
            }
        }
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let a = self.bracket(&unit_vec(self.dim, i), &self.brackets[j][k]);
                    let b = self.bracket(&unit_vec(self.dim, j), &self.brackets[k][i]);
                    let c = self.bracket(&unit_vec(self.dim, k), &self.brackets[i][j]);
                    if !is_zero_vec(&add_vec(&add_vec(&a, &b), &c)) {
                        return Err(AlgebraError::JacobiViolation(i, j, k));
                    }
                }
            }
        }
        let series = self.lower_central_series_raw();
        let last = series.last().unwrap();
        if last.dim() != 0 {
            return Err(AlgebraError::NotNilpotent(last.dim()));
        }
        Ok(series.len() - 1)
    }

    /// `[x, y]` in coordinates.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(self.dim);
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for k in 0..self.dim {
                    let add = &c * &self.brackets[i][j][k];
                    out[k] += add;
                }
            }
        }
        out
    }

    /// Matrix of `ad(x) = [x, ·]`.
    pub fn ad(&self, x: &[Rat]) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(x, &unit_vec(self.dim, j));
            for i in 0..self.dim {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn center(&self) -> Subspace {
        // Kernel of the stacked ad-matrices of all basis vectors.
        let mut rows = Vec::new();
        for i in 0..self.dim {
            let ad = self.ad(&unit_vec(self.dim, i));
            for r in 0..self.dim {
                rows.push(ad.row(r).to_vec());
            }
        }
        Mat::from_rows(rows).kernel()
    }

    fn bracket_spaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for x in a.basis_vectors() {
            for y in b.basis_vectors() {
                vs.push(self.bracket(&x, &y));
            }
        }
        Subspace::from_spanning(self.dim, vs)
    }

    fn lower_central_series_raw(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim);
        let mut series = vec![full.clone()];
        while series.last().unwrap().dim() > 0 {
            let next = self.bracket_spaces(&full, series.last().unwrap());
            let stuck = next.dim() == series.last().unwrap().dim();
            series.push(next);
            if stuck {
                break; // stabilized above zero; validate reports NotNilpotent
            }
        }
        series
    }

    /// Descending central series `C^1 = N ⊇ C^2 = [N,N] ⊇ …`, ending at 0.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        self.lower_central_series_raw()
    }

    pub fn derived_subalgebra(&self) -> Subspace {
        self.bracket_spaces(&Subspace::full(self.dim), &Subspace::full(self.dim))
    }

    /// True when `space` is closed under the bracket.
    pub fn is_subalgebra(&self, space: &Subspace) -> bool {
        self.bracket_spaces(space, space)
            .basis_vectors()
            .iter()
            .all(|v| space.contains(v))
    }

    /// True when `[N, space] ⊆ space`.
    pub fn is_ideal(&self, space: &Subspace) -> bool {
        self.bracket_spaces(&Subspace::full(self.dim), space)
            .basis_vectors()
            .iter()
            .all(|v| space.contains(v))
    }

    pub fn subalgebra(&self, space: Subspace) -> Option<Subalgebra> {
        if !self.is_subalgebra(&space) {
            return None;
        }
        let is_ideal = self.is_ideal(&space);
        Some(Subalgebra { space, is_ideal })
    }

    /// Quotient by an ideal, with the projection matrix onto the quotient
    /// coordinates.
    pub fn quotient(&self, ideal: &Subalgebra) -> Result<(LieAlgebra, Mat), AlgebraError> {
        if !ideal.is_ideal || !self.is_ideal(&ideal.space) {
            return Err(AlgebraError::NotAnIdeal);
        }
        let comp = ideal.space.complement();
        let q = comp.len();
        // Change-of-basis: rows are ideal basis then complement vectors.
        let mut rows = ideal.space.basis_vectors();
        rows.extend(comp.iter().cloned());
        let basis_mat = Mat::from_rows(rows).transpose();
        let k = ideal.space.dim();
        let coords = |v: &[Rat]| -> Vec<Rat> {
            let full = basis_mat.solve(v).expect("basis change must be invertible");
            full[k..].to_vec()
        };
        let mut proj = Mat::zeros(q, self.dim);
        for j in 0..self.dim {
            let c = coords(&unit_vec(self.dim, j));
            for i in 0..q {
                proj[(i, j)] = c[i].clone();
            }
        }
        let mut brackets = vec![vec![zero_vec(q); q]; q];
        for (a, va) in comp.iter().enumerate() {
            for (b, vb) in comp.iter().enumerate() {
                brackets[a][b] = coords(&self.bracket(va, vb));
            }
        }
        let labels = (0..q).map(|i| format!("q{}", i + 1)).collect();
        Ok((LieAlgebra::new(labels, brackets)?, proj))
    }

    /// A complete flag of ideals, refined from the lower central series from
    /// the bottom up. With `sigma`, every step is σ-stable: each central-series
    /// layer is split into +1 then −1 eigenvectors of the involution.
    pub fn jordan_holder_flag(&self, sigma: Option<&Involution>) -> Flag {
        let mut series = self.lower_central_series_raw();
        series.reverse(); // 0 = C^{class+1} ⊂ ... ⊂ C^1 = N
        let mut steps = vec![Subspace::zero(self.dim)];
        for w in series.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let mut current = steps.last().unwrap().clone();
            debug_assert!(hi.contains_subspace(&current) || current.dim() == 0);
            // Anything between C^{k+1} and C^k is an ideal: [N, C^k] ⊆ C^{k+1}.
            // Fill each layer in descending basis order, so deeper basis
            // vectors enter the flag first (e.g. 0 ⊂ ⟨e₃⟩ ⊂ ⟨e₂,e₃⟩ ⊂ h₃).
            let mut layer: Vec<Vec<Rat>> = lo.complement_within(hi);
            layer.reverse();
            let layer_vectors: Vec<Vec<Rat>> = match sigma {
                None => layer,
                Some(s) => {
                    // Split the layer into ±1 eigenvectors of the induced
                    // involution, +1 first.
                    let mut vs = Vec::new();
                    for sign in [1i64, -1] {
                        for v in &layer {
                            let sv = s.apply_vec(v);
                            let eig = if sign == 1 {
                                add_vec(v, &sv)
                            } else {
                                sub_vec(v, &sv)
                            };
                            vs.push(eig);
                        }
                    }
                    vs
                }
            };
            for v in layer_vectors {
                if current.dim() == hi.dim() {
                    break;
                }
                if !current.contains(&v) {
                    let mut b = current.basis_vectors();
                    b.push(v);
                    current = Subspace::from_spanning(self.dim, b);
                    steps.push(current.clone());
                }
            }
            assert_eq!(current.dim(), hi.dim(), "central-series layer not filled");
        }
        Flag { steps }
    }

    pub(crate) fn bch_table(&self) -> &BchTable {
        self.bch.get_or_init(|| BchTable::new(self.class))
    }
}

/// Named algebras used throughout the tests and the CLI.
pub fn catalog(name: &str) -> Result<LieAlgebra, AlgebraError> {
    if let Some(k) = name.strip_prefix("abelian_") {
        let k: usize = k
            .parse()
            .map_err(|_| AlgebraError::UnknownName(name.to_string()))?;
        if k == 0 || k > 16 {
            return Err(AlgebraError::UnknownName(name.to_string()));
        }
        let labels = (1..=k).map(|i| format!("e{i}")).collect();
        return LieAlgebra::new(labels, vec![vec![zero_vec(k); k]; k]);
    }
    match name {
        "h3" => from_sparse(3, &[(1, 2, &[(3, 1)])]),
        "h5" => from_sparse(5, &[(1, 2, &[(5, 1)]), (3, 4, &[(5, 1)])]),
        "filiform4" => from_sparse(4, &[(1, 2, &[(3, 1)]), (1, 3, &[(4, 1)])]),
        // Free class-2 algebra on 3 generators: e4=[e1,e2], e5=[e1,e3], e6=[e2,e3].
        "free2_3" => from_sparse(
            6,
            &[(1, 2, &[(4, 1)]), (1, 3, &[(5, 1)]), (2, 3, &[(6, 1)])],
        ),
        // Strictly upper-triangular 4×4 matrices; basis E12,E23,E34,E13,E24,E14.
        "ut4" => from_sparse(
            6,
            &[
                (1, 2, &[(4, 1)]),
                (2, 3, &[(5, 1)]),
                (1, 5, &[(6, 1)]),
                (4, 3, &[(6, 1)]),
            ],
        ),
        _ => Err(AlgebraError::UnknownName(name.to_string())),
    }
}

/// Deserialize an algebra (and optional involution matrix) from the JSON
/// schema `{name, dim, labels, brackets: [{i, j, out: [[k, "num/den"], ...]},
/// ...], sigma?}` with 1-based indices; omitted pairs are zero brackets.
pub fn from_json(text: &str) -> Result<(LieAlgebra, Option<Mat>), AlgebraError> {
    #[derive(serde::Deserialize)]
    struct BracketEntry {
        i: usize,
        j: usize,
        out: Vec<(usize, String)>,
    }
    #[derive(serde::Deserialize)]
    struct AlgebraFile {
        #[serde(default)]
        name: Option<String>,
        dim: usize,
        labels: Option<Vec<String>>,
        #[serde(default)]
        brackets: Vec<BracketEntry>,
        sigma: Option<Vec<Vec<String>>>,
    }
    let bad = |m: String| AlgebraError::BadInput(m);
    let file: AlgebraFile =
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let _ = file.name;
    let dim = file.dim;
    let labels = match file.labels {
        Some(l) if l.len() == dim => l,
        Some(_) => return Err(bad(format!("labels must have length {dim}"))),
        None => (1..=dim).map(|i| format!("e{i}")).collect(),
    };
    let entry = |s: &str| parse_rat(s).ok_or_else(|| bad(format!("bad rational literal {s:?}")));
    let mut table = vec![vec![zero_vec(dim); dim]; dim];
    for b in &file.brackets {
        if b.i == 0 || b.i > dim || b.j == 0 || b.j > dim {
            return Err(bad(format!("bracket index ({},{}) out of range", b.i, b.j)));
        }
        for (k, c) in &b.out {
            if *k == 0 || *k > dim {
                return Err(bad(format!("bracket output index {k} out of range")));
            }
            let c = entry(c)?;
            table[b.i - 1][b.j - 1][k - 1] = c.clone();
            table[b.j - 1][b.i - 1][k - 1] = -c;
        }
    }
    let alg = LieAlgebra::new(labels, table)?;
    let sigma = match file.sigma {
        None => None,
        Some(rows) => {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(bad(format!("sigma must be a {dim}x{dim} matrix")));
            }
            let rows: Vec<Vec<Rat>> = rows
                .iter()
                .map(|r| r.iter().map(|s| entry(s)).collect())
                .collect::<Result<_, _>>()?;
            Some(Mat::from_rows(rows))
        }
    };
    Ok((alg, sigma))
}

pub const CATALOG_NAMES: &[&str] = &[
    "abelian_1", "abelian_2", "abelian_3", "abelian_4", "h3", "h5", "filiform4", "free2_3", "ut4",
];

/// 1-based sparse bracket input: (i, j, [(k, coeff)]) meaning [e_i,e_j] = Σ coeff·e_k.
fn from_sparse(dim: usize, entries: &[(usize, usize, &[(usize, i64)])]) -> Result<LieAlgebra, AlgebraError> {
    let mut brackets = vec![vec![zero_vec(dim); dim]; dim];
    for &(i, j, outs) in entries {
        for &(k, c) in outs {
            brackets[i - 1][j - 1][k - 1] = rint(c);
            brackets[j - 1][i - 1][k - 1] = rint(-c);
        }
    }
    let labels = (1..=dim).map(|i| format!("e{i}")).collect();
    LieAlgebra::new(labels, brackets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h3_is_valid_class_2() {
        let n = catalog("h3").unwrap();
        assert_eq!(n.class, 2);
        assert_eq!(n.center(), Subspace::from_spanning(3, vec![unit_vec(3, 2)]));
    }

    #[test]
    fn abelian_class_1_center_everything() {
        let n = catalog("abelian_4").unwrap();
        assert_eq!(n.class, 1);
        assert_eq!(n.center(), Subspace::full(4));
    }

    #[test]
    fn non_nilpotent_rejected() {
        // [e1,e2] = e1 keeps e1 in every central-series term.
        let mut brackets = vec![vec![zero_vec(3); 3]; 3];
        brackets[0][1] = unit_vec(3, 0);
        brackets[1][0] = neg_vec(&unit_vec(3, 0));
        let err = LieAlgebra::new(vec!["a".into(), "b".into(), "c".into()], brackets).unwrap_err();
        assert!(matches!(err, AlgebraError::NotNilpotent(_)));
    }

    #[test]
    fn jacobi_violation_reported() {
        // [e1,e2]=e4 and [e3,e4]=e2 leave [e3,[e1,e2]] unbalanced on (1,2,3).
        let mut brackets = vec![vec![zero_vec(4); 4]; 4];
        let set = |b: &mut Vec<Vec<Vec<Rat>>>, i: usize, j: usize, k: usize| {
            b[i][j][k] = rint(1);
            b[j][i][k] = rint(-1);
        };
        set(&mut brackets, 0, 1, 3);
        set(&mut brackets, 2, 3, 1);
        let err = LieAlgebra::new((1..=4).map(|i| format!("e{i}")).collect(), brackets).unwrap_err();
        assert_eq!(err, AlgebraError::JacobiViolation(0, 1, 2));
    }

    #[test]
    fn filiform4_center_and_series() {
        let n = catalog("filiform4").unwrap();
        assert_eq!(n.class, 3);
        assert_eq!(n.center(), Subspace::from_spanning(4, vec![unit_vec(4, 3)]));
        let s = n.lower_central_series();
        assert_eq!(s.len(), 4);
        assert_eq!(s[1], Subspace::from_spanning(4, vec![unit_vec(4, 2), unit_vec(4, 3)]));
        assert_eq!(s[2], Subspace::from_spanning(4, vec![unit_vec(4, 3)]));
        assert_eq!(s[3].dim(), 0);
    }

    #[test]
    fn h3_series() {
        let n = catalog("h3").unwrap();
        let s = n.lower_central_series();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1], Subspace::from_spanning(3, vec![unit_vec(3, 2)]));
    }

    #[test]
    fn quotient_h3_by_center_is_abelian() {
        let n = catalog("h3").unwrap();
        let z = n.subalgebra(n.center()).unwrap();
        let (q, proj) = n.quotient(&z).unwrap();
        assert_eq!(q.dim, 2);
        assert_eq!(q.class, 1);
        assert_eq!(proj.rows, 2);
    }

    #[test]
    fn quotient_filiform4_by_top_is_h3() {
        let n = catalog("filiform4").unwrap();
        let z = n.subalgebra(n.center()).unwrap();
        let (q, _) = n.quotient(&z).unwrap();
        assert_eq!(q.dim, 3);
        assert_eq!(q.class, 2);
        assert_eq!(q.derived_subalgebra().dim(), 1);
    }

    #[test]
    fn quotient_by_self_is_zero() {
        let n = catalog("h3").unwrap();
        let all = n.subalgebra(Subspace::full(3)).unwrap();
        let (q, _) = n.quotient(&all).unwrap();
        assert_eq!(q.dim, 0);
    }

    #[test]
    fn quotient_respects_brackets() {
        let n = catalog("ut4").unwrap();
        let z = n.subalgebra(n.center()).unwrap();
        let (q, proj) = n.quotient(&z).unwrap();
        // proj([x,y]) = [proj x, proj y] on a fixed spread of vectors.
        for a in 0..n.dim {
            for b in 0..n.dim {
                let x = unit_vec(n.dim, a);
                let mut y = unit_vec(n.dim, b);
                y[(a + 1) % n.dim] = rat(3, 2);
                let lhs = proj.mul_vec(&n.bracket(&x, &y));
                let rhs = q.bracket(&proj.mul_vec(&x), &proj.mul_vec(&y));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn jh_flag_h3() {
        let n = catalog("h3").unwrap();
        let f = n.jordan_holder_flag(None);
        assert_eq!(f.steps.len(), 4);
        assert_eq!(f.steps[1], Subspace::from_spanning(3, vec![unit_vec(3, 2)]));
        assert_eq!(
            f.steps[2],
            Subspace::from_spanning(3, vec![unit_vec(3, 1), unit_vec(3, 2)])
        );
        for s in &f.steps {
            assert!(n.is_ideal(s));
        }
    }

    #[test]
    fn jh_flag_abelian2() {
        let n = catalog("abelian_2").unwrap();
        let f = n.jordan_holder_flag(None);
        assert_eq!(f.steps[1], Subspace::from_spanning(2, vec![unit_vec(2, 1)]));
    }

    #[test]
    fn catalog_all_valid_small_class() {
        for name in CATALOG_NAMES {
            let n = catalog(name).unwrap();
            assert!(n.class < 7, "{name}");
            assert!(n.validate().is_ok(), "{name}");
        }
        assert_eq!(catalog("ut4").unwrap().class, 3);
        assert_eq!(catalog("ut4").unwrap().center().dim(), 1);
        assert_eq!(catalog("h3").unwrap().center().dim(), 1);
        assert!(catalog("nope").is_err());
    }
}
