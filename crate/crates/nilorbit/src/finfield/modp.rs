//! Dense linear algebra over F_p with u64 entries in [0, p).

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Inverse by Fermat; requires `a != 0 mod p` and p prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_square_mod(a: u64, p: u64) -> bool {
    let a = a % p;
    if a == 0 {
        return true;
    }
    pow_mod(a, (p - 1) / 2, p) == 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatFp {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl MatFp {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        MatFp {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row.into_iter().map(|x| x % p));
        }
        MatFp {
            p,
            rows: r,
            cols: c,
            data,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &MatFp) -> MatFp {
        assert_eq!(self.cols, other.rows);
        let mut r = MatFp::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (r.get(i, j) + a * other.get(k, j)) % self.p;
                    r.data[i * other.cols + j] = v;
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = 0;
                for j in 0..self.cols {
                    s += self.get(i, j) * (v[j] % self.p);
                }
                s % self.p
            })
            .collect()
    }

    pub fn transpose(&self) -> MatFp {
        let mut r = MatFp::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                r.data[j * self.rows + i] = self.get(i, j);
            }
        }
        r
    }

    pub fn add(&self, other: &MatFp) -> MatFp {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut r = self.clone();
        for (a, b) in r.data.iter_mut().zip(&other.data) {
            *a = (*a + b) % self.p;
        }
        r
    }

    pub fn scale(&self, c: u64) -> MatFp {
        let mut r = self.clone();
        for a in r.data.iter_mut() {
            *a = *a * (c % self.p) % self.p;
        }
        r
    }

    /// Reduced row-echelon form with pivot column list.
    pub fn rref(&self) -> (MatFp, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, pr * m.cols + j);
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in 0..m.cols {
                let v = m.get(r, j) * inv % p;
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let f = m.get(i, c);
                    for j in 0..m.cols {
                        let v = sub_mod(m.get(i, j), f * m.get(r, j) % p, p);
                        m.data[i * m.cols + j] = v;
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

    pub fn kernel(&self) -> SubspaceFp {
        let (r, pivots) = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![0u64; self.cols];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = sub_mod(0, r.get(row, f), p);
            }
            basis.push(v);
        }
        SubspaceFp::from_spanning(p, self.cols, basis)
    }

    /// One solution of `self · x = b`, if any.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let p = self.p;
        let mut aug = MatFp::zeros(p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.get(i, j);
            }
            aug.data[i * (self.cols + 1) + self.cols] = b[i] % p;
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Some(x)
    }
}

/// A subspace of F_p^n held as a reduced-row-echelon basis (canonical).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceFp {
    pub p: u64,
    pub ambient: usize,
    pub basis: MatFp,
    pub pivots: Vec<usize>,
}

impl SubspaceFp {
    pub fn from_spanning(p: u64, ambient: usize, vectors: Vec<Vec<u64>>) -> Self {
        let m = MatFp::from_rows(p, vectors);
        if m.rows == 0 {
            return Self::zero(p, ambient);
        }
        assert_eq!(m.cols, ambient);
        let (r, pivots) = m.rref();
        let mut rows = Vec::new();
        for i in 0..pivots.len() {
            rows.push(r.row(i).to_vec());
        }
        let basis = if rows.is_empty() {
            MatFp::zeros(p, 0, ambient)
        } else {
            MatFp::from_rows(p, rows)
        };
        SubspaceFp {
            p,
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(p: u64, ambient: usize) -> Self {
        SubspaceFp {
            p,
            ambient,
            basis: MatFp::zeros(p, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        Self::from_spanning(p, ambient, (0..ambient).map(|i| unit(ambient, i)).collect())
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u64>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let p = self.p;
        let mut w: Vec<u64> = v.iter().map(|x| x % p).collect();
        for (row, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc];
            if c != 0 {
                for j in 0..self.ambient {
                    w[j] = sub_mod(w[j], c * self.basis.get(row, j) % p, p);
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn sum(&self, other: &SubspaceFp) -> SubspaceFp {
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        SubspaceFp::from_spanning(self.p, self.ambient, vs)
    }

    pub fn intersect(&self, other: &SubspaceFp) -> SubspaceFp {
        // kernel of [A; B]ᵀ-style construction: x in both spans
        let a = self.basis_vectors();
        let b = other.basis_vectors();
        let (da, db) = (a.len(), b.len());
        if da == 0 || db == 0 {
            return SubspaceFp::zero(self.p, self.ambient);
        }
        // columns: coefficients on a then b; rows: ambient coordinates
        let mut m = MatFp::zeros(self.p, self.ambient, da + db);
        for j in 0..da {
            for i in 0..self.ambient {
                m.set(i, j, a[j][i]);
            }
        }
        for j in 0..db {
            for i in 0..self.ambient {
                m.set(i, da + j, sub_mod(0, b[j][i], self.p));
            }
        }
        let ker = m.kernel();
        let mut vs = Vec::new();
        for k in ker.basis_vectors() {
            let mut v = vec![0u64; self.ambient];
            for j in 0..da {
                for i in 0..self.ambient {
                    v[i] = (v[i] + k[j] * a[j][i]) % self.p;
                }
            }
            vs.push(v);
        }
        SubspaceFp::from_spanning(self.p, self.ambient, vs)
    }

    /// All p^dim member vectors, in lexicographic coefficient order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let d = self.dim();
        let mut out = Vec::with_capacity((p as usize).pow(d as u32));
        let mut coeffs = vec![0u64; d];
        loop {
            let mut v = vec![0u64; self.ambient];
            for (row, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    for j in 0..self.ambient {
                        v[j] = (v[j] + c * self.basis.get(row, j)) % p;
                    }
                }
            }
            out.push(v);
            let mut i = 0;
            loop {
                if i == d {
                    return out;
                }
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }
}

pub fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_helpers() {
        assert_eq!(inv_mod(2, 5), 3);
        assert_eq!(inv_mod(4, 7), 2);
        assert!(is_prime(5) && !is_prime(9) && !is_prime(1));
        assert!(is_square_mod(4, 5) && !is_square_mod(2, 5));
        assert!(!is_square_mod(2, 3));
    }

    #[test]
    fn rref_and_kernel() {
        let m = MatFp::from_rows(5, vec![vec![2, 4], vec![1, 2]]);
        let (r, pivots) = m.rref();
        assert_eq!(pivots, vec![0]);
        assert_eq!(r.row(0), &[1, 2]);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[3, 1])); // 2·3+4·1 = 10 = 0 mod 5
        assert_eq!(MatFp::identity(5, 3).kernel().dim(), 0);
        assert_eq!(MatFp::zeros(5, 2, 3).kernel().dim(), 3);
    }

    #[test]
    fn solve_examples() {
        let m = MatFp::from_rows(7, vec![vec![1, 1], vec![0, 3]]);
        let x = m.solve(&[5, 6]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![5, 6]);
        let sing = MatFp::from_rows(3, vec![vec![1, 1], vec![2, 2]]);
        assert!(sing.solve(&[0, 1]).is_none());
    }

    #[test]
    fn subspace_ops() {
        let a = SubspaceFp::from_spanning(3, 3, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let b = SubspaceFp::from_spanning(3, 3, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[0, 1, 0]));
        assert_eq!(a.sum(&b), SubspaceFp::full(3, 3));
        assert_eq!(a.elements().len(), 9);
        // canonical representation: equality of equal spans
        let a2 = SubspaceFp::from_spanning(3, 3, vec![vec![1, 1, 0], vec![2, 1, 0]]);
        assert_eq!(a, a2);
    }
}
