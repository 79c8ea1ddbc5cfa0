use super::{Rational, UniPoly};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Dense row-major matrix over Q.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()).collect())
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    m.data[i * o.cols + j] += a * &o[(k, j)];
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, a: &Rational) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * a).collect() }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = &f * &m[(r, j)];
                        m[(i, j)] -= t;
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

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in piv.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut d = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else { return Rational::zero() };
            if p != c {
                m.swap_rows(p, c);
                d = -d;
            }
            let piv = m[(c, c)].clone();
            d *= &piv;
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..m.cols {
                    let t = &f * &m[(c, j)];
                    m[(i, j)] -= t;
                }
            }
        }
        d
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

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(x I - A)` by Faddeev-LeVerrier.
pub fn char_poly(a: &QMatrix) -> UniPoly {
    assert_eq!(a.rows, a.cols, "char_poly needs a square matrix");
    let n = a.rows;
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m = QMatrix::zeros(n, n);
    let id = QMatrix::identity(n);
    for k in 1..=n {
        m = a.mul(&m).add(&id.scale(&c[n - k + 1]));
        let am = a.mul(&m);
        c[n - k] = -am.trace() / Rational::from_integer(BigInt::from(k));
    }
    UniPoly::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn inverse_roundtrip() {
        let a = QMatrix::from_ints(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        assert_eq!(a.det(), rat(1, 1));
        assert!(QMatrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = QMatrix::from_ints(&[&[1, 2, 3]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v)[0].is_zero());
        }
    }

    #[test]
    fn charpoly_of_identity_is_power() {
        let p = char_poly(&QMatrix::identity(4));
        assert_eq!(p, UniPoly::from_ints(&[-1, 1]).pow(4));
    }

    #[test]
    fn charpoly_matches_determinant_expansion() {
        // Independent route: det(t I - A) at integer t equals p(t).
        let a = QMatrix::from_ints(&[&[1, 2, 0], &[-3, 1, 4], &[2, 2, 5]]);
        let p = char_poly(&a);
        for t in -3..4 {
            let t = rat(t, 1);
            let m = QMatrix::identity(3).scale(&t).add(&a.scale(&rat(-1, 1)));
            assert_eq!(m.det(), p.eval(&t));
        }
    }
}
