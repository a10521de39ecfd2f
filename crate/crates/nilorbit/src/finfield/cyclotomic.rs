//! Exact arithmetic in Z[ζ_p], the cyclotomic integers for a prime p,
//! in the integral basis ζ⁰, …, ζ^{p−2}. Character sums stay exact: no
//! floating point anywhere.

/// Σ cₖ ζ_p^k with coefficients in the canonical basis ζ⁰..ζ^{p−2}
/// (ζ^{p−1} = −Σ_{k<p−1} ζ^k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycInt {
    pub p: u64,
    pub c: Vec<i64>,
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        CycInt {
            p,
            c: vec![0; (p - 1) as usize],
        }
    }

    pub fn one(p: u64) -> Self {
        Self::zeta_pow(p, 0)
    }

    /// ζ_p^k, reduced to the basis.
    pub fn zeta_pow(p: u64, k: u64) -> Self {
        let k = (k % p) as usize;
        let mut c = vec![0i64; (p - 1) as usize];
        if k < (p - 1) as usize {
            c[k] = 1;
        } else {
            for x in c.iter_mut() {
                *x = -1;
            }
        }
        CycInt { p, c }
    }

    pub fn integer(p: u64, n: i64) -> Self {
        let mut z = Self::zero(p);
        z.c[0] = n;
        z
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn add_assign(&mut self, other: &CycInt) {
        debug_assert_eq!(self.p, other.p);
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += b;
        }
    }

    pub fn add(&self, other: &CycInt) -> CycInt {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn sub(&self, other: &CycInt) -> CycInt {
        let mut r = self.clone();
        for (a, b) in r.c.iter_mut().zip(&other.c) {
            *a -= b;
        }
        r
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            p: self.p,
            c: self.c.iter().map(|&x| -x).collect(),
        }
    }

    pub fn scale(&self, n: i64) -> CycInt {
        CycInt {
            p: self.p,
            c: self.c.iter().map(|&x| x * n).collect(),
        }
    }

    pub fn mul(&self, other: &CycInt) -> CycInt {
        debug_assert_eq!(self.p, other.p);
        let p = self.p as usize;
        // convolve exponents mod p, then reduce ζ^{p−1}
        let mut full = vec![0i64; p];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                full[(i + j) % p] += a * b;
            }
        }
        let top = full[p - 1];
        let mut c = vec![0i64; p - 1];
        for k in 0..p - 1 {
            c[k] = full[k] - top;
        }
        CycInt { p: self.p, c }
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> CycInt {
        let p = self.p;
        let mut r = CycInt::zero(p);
        for (k, &a) in self.c.iter().enumerate() {
            if a != 0 {
                r.add_assign(&CycInt::zeta_pow(p, (p - k as u64) % p).scale(a));
            }
        }
        r
    }

    /// The integer this represents, if it is rational (coordinates above ζ⁰
    /// all vanish in the canonical basis).
    pub fn as_integer(&self) -> Option<i64> {
        if self.c[1..].iter().all(|&x| x == 0) {
            Some(self.c[0])
        } else {
            None
        }
    }

    /// Exact division by a positive integer, if every coefficient divides.
    pub fn div_exact(&self, d: i64) -> Option<CycInt> {
        let mut c = Vec::with_capacity(self.c.len());
        for &x in &self.c {
            if x % d != 0 {
                return None;
            }
            c.push(x / d);
        }
        Some(CycInt { p: self.p, c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_relations() {
        let p = 5;
        // 1 + ζ + ζ² + ζ³ + ζ⁴ = 0
        let mut s = CycInt::zero(p);
        for k in 0..p {
            s.add_assign(&CycInt::zeta_pow(p, k));
        }
        assert!(s.is_zero());
        // ζ² · ζ³ = ζ⁵ = 1
        assert_eq!(
            CycInt::zeta_pow(p, 2).mul(&CycInt::zeta_pow(p, 3)),
            CycInt::one(p)
        );
    }

    #[test]
    fn conj_and_norm() {
        let p = 3;
        let z = CycInt::zeta_pow(p, 1);
        assert_eq!(z.conj(), CycInt::zeta_pow(p, 2));
        // ζ·conj(ζ) = 1
        assert_eq!(z.mul(&z.conj()), CycInt::one(p));
        // |1 + ζ|² = (1+ζ)(1+ζ²) = 1+ζ+ζ²+1 = 1
        let w = CycInt::one(p).add(&z);
        assert_eq!(w.mul(&w.conj()).as_integer(), Some(1));
    }

    #[test]
    fn rationality() {
        assert_eq!(CycInt::integer(5, -7).as_integer(), Some(-7));
        assert_eq!(CycInt::zeta_pow(5, 1).as_integer(), None);
        // ζ + ζ² + ζ³ + ζ⁴ = −1 is rational
        let mut s = CycInt::zero(5);
        for k in 1..5 {
            s.add_assign(&CycInt::zeta_pow(5, k));
        }
        assert_eq!(s.as_integer(), Some(-1));
    }

    #[test]
    fn exact_division() {
        let z = CycInt::integer(3, 6).add(&CycInt::zeta_pow(3, 1).scale(9));
        let d = z.div_exact(3).unwrap();
        assert_eq!(d, CycInt::integer(3, 2).add(&CycInt::zeta_pow(3, 1).scale(3)));
        assert!(z.div_exact(4).is_none());
    }
}
