use super::{Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Dense univariate polynomial over Q, coefficients stored from the constant
/// term upwards with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly {
    c: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { c: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn constant(a: Rational) -> Self {
        Self::new(vec![a])
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| acc.mul(&Self::new(vec![-r.clone(), Rational::one()])))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.c.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &Rational) -> Self {
        Self::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut r = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        Self::new(r)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.lead();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = &r[k + dd] / &lc;
            if !t.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &t * b;
                }
            }
            q[k] = t;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.lead();
        self.scale(&l.recip())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g` and `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_in<S: Scalar>(&self, x: &S) -> S {
        self.c.iter().rev().fold(x.zero_like(), |acc, a| acc.mul(x).add(&x.lift(a)))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, a| acc * x + a.to_f64().unwrap_or(f64::NAN))
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.c.iter().rev().fold(Self::zero(), |acc, a| acc.mul(g).add(&Self::constant(a.clone())))
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Integer multiple with coprime integer coefficients and positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let l = self.c.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let mut v: Vec<BigInt> = self.c.iter().map(|a| (a * Rational::from_integer(l.clone())).to_integer()).collect();
        let g = v.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
        let s = if v.last().unwrap().is_negative() { -g } else { g };
        for a in v.iter_mut() {
            *a = &*a / &s;
        }
        v
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        Self::new(v.iter().map(|a| Rational::from_integer(a.clone())).collect())
    }

    /// Rational roots, each listed once, in increasing order.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.is_zero() {
            return vec![];
        }
        let mut out = Vec::new();
        let mut p = self.primitive_integer();
        while p.len() > 1 && p[0].is_zero() {
            p.remove(0);
            if !out.contains(&Rational::zero()) {
                out.push(Rational::zero());
            }
        }
        if p.len() > 1 {
            let a0 = divisors(&p[0].abs());
            let an = divisors(&p.last().unwrap().abs());
            let f = UniPoly::from_bigints(&p);
            for num in &a0 {
                for den in &an {
                    for sgn in [1i32, -1] {
                        let r = Rational::new(num * BigInt::from(sgn), den.clone());
                        if !out.contains(&r) && f.eval(&r).is_zero() {
                            out.push(r);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Sturm sequence of the square-free part.
    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let p = self.squarefree_part();
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            seq.push(r);
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(seq: &[UniPoly], a: &Rational, b: &Rational) -> usize {
        sign_changes(seq, a) - sign_changes(seq, b)
    }

    /// Cauchy bound: every complex root has absolute value below it.
    pub fn root_bound(&self) -> Rational {
        let l = self.lead().abs();
        let m = self.c.iter().rev().skip(1).map(|a| a.abs() / &l).max().unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    /// Isolating intervals `(lo, hi]` for the distinct real roots, in
    /// increasing order, each containing exactly one root.
    pub fn isolate_real_roots(&self) -> Vec<(Rational, Rational)> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let seq = self.sturm_sequence();
        let b = self.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = Self::count_roots(&seq, &lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        out.sort();
        out
    }

    /// Shrinks an isolating interval `(lo, hi]` until its width is at most `w`.
    pub fn refine_root(seq: &[UniPoly], lo: &Rational, hi: &Rational, w: &Rational) -> (Rational, Rational) {
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        let two = Rational::from_integer(2.into());
        while &(&hi - &lo) > w {
            let mid = (&lo + &hi) / &two;
            if Self::count_roots(seq, &lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }

    /// Formats with the given variable name, highest degree first.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let abs = a.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        s
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display("x"))
    }
}

fn sign_changes(seq: &[UniPoly], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_zero() { 0 } else if v.is_positive() { 1 } else { -1 };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Positive divisors by trial division.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![];
    }
    let mut fs: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            fs.push((p.clone(), e));
        }
        p += 1;
    }
    if !m.is_one() {
        fs.push((m, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in fs {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut q = d.clone();
            for _ in 0..=e {
                next.push(q.clone());
                q *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn division_and_gcd() {
        let f = UniPoly::from_ints(&[-1, 0, 1]);
        let g = UniPoly::from_ints(&[-1, 1]);
        let (q, r) = f.divrem(&g);
        assert_eq!(q, UniPoly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&UniPoly::from_ints(&[1, 2, 1])), UniPoly::from_ints(&[1, 1]));
    }

    #[test]
    fn extended_gcd_identity() {
        let a = UniPoly::from_ints(&[1, 0, 0, 1]);
        let b = UniPoly::from_ints(&[2, -3, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn sturm_counts_cubic_roots() {
        let f = UniPoly::from_ints(&[-1, -2, 1, 1]);
        let iv = f.isolate_real_roots();
        assert_eq!(iv.len(), 3);
        let g = UniPoly::from_ints(&[1, 0, 1]);
        assert!(g.isolate_real_roots().is_empty());
    }

    #[test]
    fn rational_roots_found() {
        let f = UniPoly::from_roots(&[rat(1, 2), rat(-3, 1), rat(0, 1)]);
        assert_eq!(f.rational_roots(), vec![rat(-3, 1), rat(0, 1), rat(1, 2)]);
    }

    #[test]
    fn divisors_of_twelve() {
        let d: Vec<i64> = divisors(&BigInt::from(12)).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }
}
