//! Exact rational linear algebra: dense matrices over `Q`, reduced row
//! echelon form, kernels, solving, and canonicalized subspaces.

pub use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational scalar. Always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

/// Shorthand for a small rational constant.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for a small integer as a rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses "n" or "n/d" with optional sign.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

/// Renders a rational as "n" or "n/d".
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense matrix of rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Rat]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row-echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let sub = &f * &m[(r, j)];
                        m[(i, j)] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space, canonicalized.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            basis.push(v);
        }
        Subspace::from_spanning(self.cols, basis)
    }

    /// One solution of `self * x = b`, or `None` when the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// A linear subspace of `Q^n`, stored as the reduced row-echelon basis of its
/// row space. Rref is unique, so `==` decides equality of subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient_dim: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_spanning(ambient_dim: usize, vectors: Vec<Vec<Rat>>) -> Self {
        if vectors.is_empty() {
            return Subspace {
                ambient_dim,
                basis: Mat::zeros(0, ambient_dim),
                pivots: Vec::new(),
            };
        }
        let (r, pivots) = Mat::from_rows(vectors).rref();
        let basis = if pivots.is_empty() {
            Mat::zeros(0, ambient_dim)
        } else {
            Mat::from_rows((0..pivots.len()).map(|i| r.row(i).to_vec()).collect())
        };
        Subspace {
            ambient_dim,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace::from_spanning(ambient_dim, Vec::new())
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace::from_spanning(
            ambient_dim,
            (0..ambient_dim)
                .map(|i| unit_vec(ambient_dim, i))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rat>> {
        self.basis.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for j in 0..self.ambient_dim {
                    let sub = &f * &self.basis[(i, j)];
                    v[j] -= sub;
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.rows_iter().all(|r| self.contains(r))
    }

    /// Coordinates of `v` in this subspace's rref basis, if `v` lies in it.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::from_spanning(self.ambient_dim, vs)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        // Solve A^T x + B^T y = 0; the intersection is spanned by A^T x.
        let k = self.dim();
        let m = other.dim();
        if k == 0 || m == 0 {
            return Subspace::zero(self.ambient_dim);
        }
        let mut stacked = Mat::zeros(self.ambient_dim, k + m);
        for j in 0..k {
            for i in 0..self.ambient_dim {
                stacked[(i, j)] = self.basis[(j, i)].clone();
            }
        }
        for j in 0..m {
            for i in 0..self.ambient_dim {
                stacked[(i, k + j)] = other.basis[(j, i)].clone();
            }
        }
        let ker = stacked.kernel();
        let vectors = ker
            .basis_vectors()
            .into_iter()
            .map(|xy| {
                let mut v = vec![Rat::zero(); self.ambient_dim];
                for (j, c) in xy[..k].iter().enumerate() {
                    for i in 0..self.ambient_dim {
                        let add = c * &self.basis[(j, i)];
                        v[i] += add;
                    }
                }
                v
            })
            .collect();
        Subspace::from_spanning(self.ambient_dim, vectors)
    }

    /// Extends this subspace's basis to a basis of the ambient space by
    /// standard basis vectors at non-pivot positions.
    pub fn complement(&self) -> Vec<Vec<Rat>> {
        (0..self.ambient_dim)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| unit_vec(self.ambient_dim, c))
            .collect()
    }

    /// A complement of `self` inside `within` (`self` must be contained in
    /// it), picked greedily from `within`'s rref basis.
    pub fn complement_within(&self, within: &Subspace) -> Vec<Vec<Rat>> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in within.basis_vectors() {
            if !acc.contains(&v) {
                let mut vs = acc.basis_vectors();
                vs.push(v.clone());
                acc = Subspace::from_spanning(self.ambient_dim, vs);
                out.push(v);
            }
        }
        out
    }
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

pub fn zero_vec(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_vec(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

pub fn scale_vec(c: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| c * x).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// True when `r` is a square in `Q`.
pub fn is_square_rat(r: &Rat) -> bool {
    if r.is_negative() {
        return false;
    }
    r.numer().sqrt().pow(2) == *r.numer() && r.denom().sqrt().pow(2) == *r.denom()
}
