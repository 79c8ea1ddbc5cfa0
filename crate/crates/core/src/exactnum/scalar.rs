use super::Rational;
use num_traits::{One, Zero};
use std::fmt::Debug;

/// Exact field arithmetic shared by rationals and number-field elements.
///
/// Constructors take `&self` because field elements carry their modulus.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn lift(&self, r: &Rational) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    fn is_one_elem(&self) -> bool {
        self.sub(&self.one_like()).is_zero_elem()
    }

    fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one_like();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Some(acc)
    }
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn lift(&self, r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}
