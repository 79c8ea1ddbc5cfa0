//! Absolute logarithmic Weil heights, simultaneous approximation and
//! multiplicative relations among rationals.
//!
//! Heights of rational data are exact: they are logarithms of explicit
//! positive integers and are compared through those integers. Heights of
//! algebraic numbers go through the Mahler measure and carry an error bound.

use crate::exactnum::{is_irreducible, lattice, Rational, UniPoly};
use crate::multipoly::MultiPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeightError {
    #[error("projective point with all coordinates zero")]
    AllZeroProjective,
    #[error("empty coordinate list")]
    Empty,
    #[error("polynomial is reducible over Q")]
    Reducible,
    #[error("degree {0} outside 1..=6")]
    UnsupportedDegree(usize),
    #[error("zero polynomial has no height")]
    ZeroPolynomial,
    #[error("zero entry in multiplicative relation input")]
    ZeroInput,
    #[error("enumeration would exceed {0} tuples")]
    BudgetExceeded(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Exactness {
    /// The value is `log(arg)` for an explicit positive integer.
    ExactLog {
        #[serde(serialize_with = "crate::exactnum::ser_display")]
        arg: BigInt,
    },
    /// Floating value with an absolute error bound.
    Numeric { error: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightValue {
    pub value: f64,
    pub exactness: Exactness,
}

impl HeightValue {
    fn exact(arg: BigInt) -> Self {
        HeightValue { value: log_big(&arg), exactness: Exactness::ExactLog { arg } }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.exactness, Exactness::ExactLog { .. })
    }

    /// The integer whose logarithm this height is, when exact.
    pub fn exp_arg(&self) -> Option<&BigInt> {
        match &self.exactness {
            Exactness::ExactLog { arg } => Some(arg),
            Exactness::Numeric { .. } => None,
        }
    }

    pub fn error(&self) -> f64 {
        match self.exactness {
            Exactness::ExactLog { .. } => 0.0,
            Exactness::Numeric { error } => error,
        }
    }
}

impl std::fmt::Display for HeightValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.exactness {
            Exactness::ExactLog { arg } => write!(f, "exact log({arg}) = {:.15}", self.value),
            Exactness::Numeric { error } => write!(f, "numeric {:.15} (error <= {error:.1e})", self.value),
        }
    }
}

/// Natural log of a positive big integer without overflowing `f64`.
pub fn log_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HeightMode {
    Affine,
    Projective,
}

/// Coprime integer representative of a projective point.
fn integer_representative(coords: &[Rational]) -> Vec<BigInt> {
    let den = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coords.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Weil height of a rational point. The affine height of `(x_1..x_n)` is the
/// projective height of `[1 : x_1 : ... : x_n]`.
pub fn height_point(coords: &[Rational], mode: HeightMode) -> Result<HeightValue, HeightError> {
    if coords.is_empty() {
        return Err(HeightError::Empty);
    }
    let v: Vec<Rational> = match mode {
        HeightMode::Affine => std::iter::once(Rational::one()).chain(coords.iter().cloned()).collect(),
        HeightMode::Projective => coords.to_vec(),
    };
    if v.iter().all(|c| c.is_zero()) {
        return Err(HeightError::AllZeroProjective);
    }
    let rep = integer_representative(&v);
    Ok(HeightValue::exact(rep.iter().map(|x| x.abs()).max().unwrap()))
}

/// Projective height of the nonzero coefficients.
pub fn height_poly(p: &MultiPoly) -> Result<HeightValue, HeightError> {
    if p.is_zero() {
        return Err(HeightError::ZeroPolynomial);
    }
    let c: Vec<Rational> = p.terms().map(|(_, c)| c.clone()).collect();
    height_point(&c, HeightMode::Projective)
}

/// Factorization of a nonzero rational over its places: `x = sign * archimedean`
/// with `archimedean = prod p^finite[p]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaceDecomposition {
    pub finite: BTreeMap<BigInt, i64>,
    pub archimedean: Rational,
    pub negative: bool,
}

impl PlaceDecomposition {
    pub fn reconstruct(&self) -> Rational {
        let mut r = Rational::one();
        for (p, &e) in &self.finite {
            let pe = Rational::from_integer(p.pow(e.unsigned_abs() as u32));
            r = if e >= 0 { r * pe } else { r / pe };
        }
        if self.negative {
            -r
        } else {
            r
        }
    }

    /// `sum_v log|x|_v` with `|x|_p = p^{-v_p(x)}`, as a product of rationals
    /// that must equal 1.
    pub fn product_formula_holds(&self) -> bool {
        let mut prod = self.archimedean.clone();
        for (p, &e) in &self.finite {
            let pe = Rational::from_integer(p.pow(e.unsigned_abs() as u32));
            prod = if e >= 0 { prod / pe } else { prod * pe };
        }
        prod.is_one()
    }

    /// Sum over all places of `log max(1, |x|_v)`: the height of `x`.
    pub fn local_height_sum(&self) -> f64 {
        let arch = self.archimedean.to_f64().unwrap_or(f64::INFINITY).ln().max(0.0);
        let fin: f64 = self.finite.iter().filter(|(_, &e)| e < 0).map(|(p, &e)| -(e as f64) * log_big(p)).sum();
        arch + fin
    }
}

fn factor_trial(mut n: BigInt, out: &mut BTreeMap<BigInt, i64>, sign: i64) {
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        while (&n % &p).is_zero() {
            *out.entry(p.clone()).or_insert(0) += sign;
            n /= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if n > BigInt::one() {
        *out.entry(n).or_insert(0) += sign;
    }
}

/// Place decomposition by trial division; intended for small inputs.
pub fn place_decomposition(x: &Rational) -> Result<PlaceDecomposition, HeightError> {
    if x.is_zero() {
        return Err(HeightError::ZeroInput);
    }
    let mut finite = BTreeMap::new();
    factor_trial(x.numer().abs(), &mut finite, 1);
    factor_trial(x.denom().clone(), &mut finite, -1);
    finite.retain(|_, e| *e != 0);
    Ok(PlaceDecomposition { finite, archimedean: x.abs(), negative: x.is_negative() })
}

/// Gaussian rational used to certify complex root approximations.
#[derive(Clone, Debug)]
struct GQ {
    re: Rational,
    im: Rational,
}

impl GQ {
    fn from_f64(re: f64, im: f64) -> Self {
        GQ { re: Rational::from_float(re).unwrap_or_default(), im: Rational::from_float(im).unwrap_or_default() }
    }
    fn sub(&self, o: &GQ) -> GQ {
        GQ { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &GQ) -> GQ {
        GQ { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn norm2(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &GQ) -> GQ {
        let n = o.norm2();
        let c = GQ { re: o.re.clone(), im: -o.im.clone() };
        let p = self.mul(&c);
        GQ { re: p.re / &n, im: p.im / n }
    }
    /// Rounds both parts to the grid `2^-bits` to keep denominators small.
    fn round(&self, bits: u32) -> GQ {
        let s = Rational::from_integer(BigInt::one() << bits);
        let r = |x: &Rational| (x * &s).round() / &s;
        GQ { re: r(&self.re), im: r(&self.im) }
    }
    fn abs_f64(&self) -> f64 {
        self.norm2().to_f64().unwrap().sqrt()
    }
}

fn eval_gq(c: &[Rational], z: &GQ) -> GQ {
    let mut acc = GQ { re: Rational::zero(), im: Rational::zero() };
    for a in c.iter().rev() {
        acc = acc.mul(z);
        acc.re += a;
    }
    acc
}

/// Simultaneous complex root approximation (Aberth iteration in `f64`).
fn aberth(c: &[f64]) -> Vec<num_complex::Complex64> {
    use num_complex::Complex64 as C;
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..n).map(|k| C::from_polar(bound * 0.5 + 0.1, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    let eval = |x: C| {
        let mut p = C::new(0.0, 0.0);
        let mut dp = C::new(0.0, 0.0);
        for a in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C = (0..n).filter(|&j| j != i).map(|j| C::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (C::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-17 {
            break;
        }
    }
    z
}

/// Height of an algebraic number given by its minimal polynomial:
/// `log M(f) / deg f` with `M` the Mahler measure of the primitive integer
/// polynomial.
///
/// Root approximations are polished by exact Newton steps and enclosed in
/// Weierstrass discs of radius `n |f(z_i)| / |a_n prod (z_i - z_j)|`; when
/// the discs are disjoint each holds exactly one root, and since
/// `w -> log max(1, |w|)` is 1-Lipschitz the radii bound the error.
pub fn height_algebraic(minpoly: &UniPoly) -> Result<HeightValue, HeightError> {
    let d = minpoly.degree().ok_or(HeightError::ZeroPolynomial)?;
    if !(1..=6).contains(&d) {
        return Err(HeightError::UnsupportedDegree(d));
    }
    if !is_irreducible(minpoly) {
        return Err(HeightError::Reducible);
    }
    let ints = minpoly.primitive_integer();
    let lead = ints[d].abs();
    if d == 1 {
        let x = Rational::new(-ints[0].clone(), ints[1].clone());
        return height_point(&[x], HeightMode::Affine);
    }
    let c: Vec<Rational> = ints.iter().map(|x| Rational::from_integer(x.clone())).collect();
    let dc: Vec<Rational> = (1..=d).map(|i| &c[i] * Rational::from_integer(BigInt::from(i))).collect();
    let approx = aberth(&ints.iter().map(|x| x.to_f64().unwrap()).collect::<Vec<_>>());
    let mut z: Vec<GQ> = approx.iter().map(|w| GQ::from_f64(w.re, w.im)).collect();
    for _ in 0..3 {
        z = z
            .iter()
            .map(|w| {
                let fp = eval_gq(&dc, w);
                if fp.norm2().is_zero() {
                    w.clone()
                } else {
                    w.sub(&eval_gq(&c, w).div(&fp)).round(120)
                }
            })
            .collect();
    }
    let lead_q = GQ { re: Rational::from_integer(ints[d].clone()), im: Rational::zero() };
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        let mut den = lead_q.clone();
        for j in 0..d {
            if j != i {
                den = den.mul(&z[i].sub(&z[j]));
            }
        }
        let w = if den.norm2().is_zero() { f64::INFINITY } else { eval_gq(&c, &z[i]).div(&den).abs_f64() };
        // Next float up guards the sqrt rounding.
        radii.push((d as f64 * w) * (1.0 + 1e-12) + f64::MIN_POSITIVE);
    }
    let disjoint = (0..d).all(|i| (0..d).all(|j| i == j || z[i].sub(&z[j]).abs_f64() > radii[i] + radii[j]));
    let logs: f64 = z.iter().map(|w| w.abs_f64().max(1.0).ln()).sum();
    let value = (log_big(&lead) + logs) / d as f64;
    let error = if disjoint {
        radii.iter().sum::<f64>() / d as f64 + 4.0 * f64::EPSILON * (1.0 + value.abs())
    } else {
        f64::INFINITY
    };
    Ok(HeightValue { value: value.max(0.0), exactness: Exactness::Numeric { error } })
}

/// A real number given exactly: a rational, or a real root of an irreducible
/// polynomial isolated in `(lo, hi]`.
#[derive(Clone, Debug)]
pub enum RealInput {
    Rational(Rational),
    Algebraic { seq: Vec<UniPoly>, lo: Rational, hi: Rational },
}

impl RealInput {
    /// The `index`-th real root of `poly` in increasing order.
    pub fn algebraic(poly: &UniPoly, index: usize) -> Option<Self> {
        let roots = poly.isolate_real_roots();
        let (lo, hi) = roots.get(index)?.clone();
        if poly.eval(&hi).is_zero() {
            return Some(RealInput::Rational(hi));
        }
        Some(RealInput::Algebraic { seq: poly.sturm_sequence(), lo, hi })
    }

    /// Positive square root of a nonnegative rational.
    pub fn sqrt(a: &Rational) -> Self {
        let p = UniPoly::new(vec![-a.clone(), Rational::zero(), Rational::one()]);
        let rs = p.isolate_real_roots();
        let (lo, hi) = rs.last().cloned().unwrap_or((Rational::zero(), Rational::zero()));
        if p.eval(&hi).is_zero() || rs.is_empty() {
            let v = if rs.is_empty() { Rational::zero() } else { hi };
            return RealInput::Rational(v);
        }
        RealInput::Algebraic { seq: p.sturm_sequence(), lo, hi }
    }

    pub fn approx(&self) -> f64 {
        match self {
            RealInput::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            RealInput::Algebraic { seq, lo, hi } => {
                let w = Rational::new(BigInt::one(), BigInt::one() << 60);
                let (a, b) = UniPoly::refine_root(seq, lo, hi, &w);
                ((a + b) / Rational::from_integer(2.into())).to_f64().unwrap()
            }
        }
    }

    /// Exact `theta <= b`.
    pub fn le(&self, b: &Rational) -> bool {
        match self {
            RealInput::Rational(r) => r <= b,
            RealInput::Algebraic { seq, lo, hi } => {
                if b <= lo {
                    false
                } else if b >= hi {
                    true
                } else {
                    UniPoly::count_roots(seq, lo, b) == 1
                }
            }
        }
    }

    /// Exact `theta >= b`.
    pub fn ge(&self, b: &Rational) -> bool {
        match self {
            RealInput::Rational(r) => r >= b,
            RealInput::Algebraic { seq, lo, hi } => {
                if b <= lo {
                    true
                } else if b > hi {
                    false
                } else {
                    // theta in (lo, hi]; theta >= b iff no root in (lo, b) and
                    // theta is not below b, i.e. the root lies in [b, hi].
                    let below = UniPoly::count_roots(seq, lo, b) == 1;
                    !below || seq[0].eval(b).is_zero()
                }
            }
        }
    }

    /// Exact test of `|q theta - p| <= eps`.
    pub fn within(&self, q: &BigInt, p: &BigInt, eps: &Rational) -> bool {
        let qq = Rational::from_integer(q.clone());
        let pp = Rational::from_integer(p.clone());
        self.ge(&((&pp - eps) / &qq)) && self.le(&((&pp + eps) / &qq))
    }
}

/// Smallest `q` with `1 <= q <= Q^n` and `|q theta_i - p_i| <= 1/Q` for all `i`.
pub fn dirichlet_approx(theta: &[RealInput], big_q: u64) -> Option<(BigInt, Vec<BigInt>)> {
    assert!(big_q >= 2, "Q must be at least 2");
    let eps = Rational::new(BigInt::one(), BigInt::from(big_q));
    let approx: Vec<f64> = theta.iter().map(|t| t.approx()).collect();
    let limit = BigInt::from(big_q).pow(theta.len() as u32);
    let mut q = BigInt::one();
    while q <= limit {
        let qf = q.to_f64().unwrap();
        let mut ps = Vec::with_capacity(theta.len());
        let ok = theta.iter().zip(&approx).all(|(t, a)| {
            let guess = BigInt::from((qf * a).round() as i64);
            let found = [&guess - 1, guess.clone(), &guess + 1].into_iter().find(|p| t.within(&q, p, &eps));
            match found {
                Some(p) => {
                    ps.push(p);
                    true
                }
                None => false,
            }
        });
        if ok {
            return Some((q, ps));
        }
        q += 1;
    }
    None
}

/// Exponent vectors of the `r_i` over a coprime base, so that
/// `prod r_i^{b_i} = ±1` iff `b` is in the integer kernel of the rows.
fn coprime_exponent_rows(r: &[Rational]) -> Vec<Vec<i64>> {
    let n = r.len();
    let mut base: Vec<(BigInt, Vec<i64>)> = Vec::new();
    let push = |b: &mut Vec<(BigInt, Vec<i64>)>, x: BigInt, v: Vec<i64>| {
        if x.is_one() {
            return;
        }
        if let Some(e) = b.iter_mut().find(|(y, _)| *y == x) {
            for (a, c) in e.1.iter_mut().zip(&v) {
                *a += c;
            }
        } else {
            b.push((x, v));
        }
    };
    for (i, x) in r.iter().enumerate() {
        let mut v = vec![0; n];
        v[i] = 1;
        push(&mut base, x.numer().abs(), v.clone());
        v[i] = -1;
        push(&mut base, x.denom().clone(), v);
    }
    loop {
        let mut split = None;
        'outer: for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].0.gcd(&base[j].0);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { break };
        let (b, v) = base.swap_remove(j);
        let (a, u) = base.swap_remove(i);
        let uv: Vec<i64> = u.iter().zip(&v).map(|(x, y)| x + y).collect();
        push(&mut base, &a / &g, u);
        push(&mut base, &b / &g, v);
        push(&mut base, g, uv);
    }
    base.retain(|(_, v)| v.iter().any(|&x| x != 0));
    base.sort();
    base.into_iter().map(|(_, v)| v).collect()
}

/// Nonzero `b` of minimal sup-norm with `prod r_i^{b_i} in {±1}`, first nonzero
/// entry positive, lexicographically first among ties. `None` if the `r_i`
/// are multiplicatively independent modulo ±1.
pub fn mult_relation(r: &[Rational]) -> Result<Option<Vec<i64>>, HeightError> {
    if r.iter().any(|x| x.is_zero()) {
        return Err(HeightError::ZeroInput);
    }
    let n = r.len();
    let rows = coprime_exponent_rows(r);
    let ker = if rows.is_empty() { lattice::identity(n) } else { lattice::integer_kernel(&rows, n) };
    if ker.is_empty() {
        return Ok(None);
    }
    let upper = ker.iter().map(|v| v.iter().map(|x| x.abs()).max().unwrap()).min().unwrap();
    let in_kernel = |b: &[i64]| rows.iter().all(|row| lattice::dot(row, b) == 0);
    // Enumerate the cube shell by shell; the sup-norm of the best kernel
    // basis vector bounds the search.
    for s in 1..=upper {
        let mut best: Option<Vec<i64>> = None;
        let mut b = vec![-s; n];
        loop {
            if b.iter().any(|x| x.abs() == s) && b.iter().find(|&&x| x != 0).map_or(false, |&x| x > 0) && in_kernel(&b) {
                if best.as_ref().map_or(true, |c| b < *c) {
                    best = Some(b.clone());
                }
            }
            let mut k = n;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                if b[k] < s {
                    b[k] += 1;
                    break;
                }
                b[k] = -s;
            }
            if b.iter().all(|&x| x == -s) {
                break;
            }
        }
        if best.is_some() {
            return Ok(best);
        }
        if n > 8 && s >= 1 {
            break;
        }
    }
    // Large arity: fall back to the shortest kernel basis vector.
    Ok(ker.into_iter().min_by_key(|v| v.iter().map(|x| x.abs()).max().unwrap()).map(|v| lattice::primitive(&v)))
}

/// Rationals of height at most `log h`, in increasing order.
fn rationals_up_to(h: u64) -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    for q in 1..=h {
        for p in 1..=h {
            if p.gcd(&q) == 1 {
                let x = Rational::new(BigInt::from(p), BigInt::from(q));
                out.push(x.clone());
                out.push(-x);
            }
        }
    }
    out.sort();
    out
}

pub const ENUMERATION_CAP: usize = 10_000_000;

/// All rational `n`-tuples of affine height at most `bound`, in lexicographic
/// order of their coordinates.
pub fn enumerate_bounded(bound: f64, n: usize, cap: usize) -> Result<Vec<Vec<Rational>>, HeightError> {
    assert!(bound >= 0.0, "height bound must be nonnegative");
    let mut h: u64 = 1;
    while ((h + 1) as f64).ln() <= bound + 1e-12 {
        h += 1;
    }
    let singles = rationals_up_to(h);
    let hb = BigInt::from(h);
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    if n == 0 {
        return Ok(vec![vec![]]);
    }
    loop {
        let t: Vec<Rational> = idx.iter().map(|&i| singles[i].clone()).collect();
        if n == 1 || height_point(&t, HeightMode::Affine).map(|v| v.exp_arg().unwrap() <= &hb).unwrap_or(false) {
            if out.len() == cap {
                return Err(HeightError::BudgetExceeded(cap));
            }
            out.push(t);
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < singles.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    fn arg(v: &HeightValue) -> BigInt {
        v.exp_arg().unwrap().clone()
    }

    #[test]
    fn point_heights() {
        assert_eq!(arg(&height_point(&[rat(2, 3)], HeightMode::Affine).unwrap()), BigInt::from(3));
        assert_eq!(arg(&height_point(&[int(3), int(4), int(5)], HeightMode::Projective).unwrap()), BigInt::from(5));
        assert_eq!(height_point(&[int(1)], HeightMode::Affine).unwrap().value, 0.0);
        assert_eq!(height_point(&[int(0), int(0)], HeightMode::Projective), Err(HeightError::AllZeroProjective));
    }

    #[test]
    fn poly_heights() {
        let v = ["x", "y"];
        let h = |s: &str| arg(&height_poly(&MultiPoly::parse(s, &v, false).unwrap()).unwrap());
        assert_eq!(h("2*x + 4*y"), BigInt::from(2));
        assert_eq!(h("x + y"), BigInt::from(1));
        assert_eq!(h("3/2*x^2 - 5"), BigInt::from(10));
    }

    #[test]
    fn places_and_product_formula() {
        let d = place_decomposition(&rat(-12, 35)).unwrap();
        assert_eq!(d.reconstruct(), rat(-12, 35));
        assert!(d.product_formula_holds());
        assert!((d.local_height_sum() - 35f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn algebraic_heights() {
        let golden = height_algebraic(&UniPoly::from_ints(&[-1, -1, 1])).unwrap();
        let want = 0.5 * ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((golden.value - want).abs() < 1e-14);
        assert!(golden.error() <= 1e-12);
        let s2 = height_algebraic(&UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert!((s2.value - 0.5 * 2f64.ln()).abs() < 1e-14);
        let z3 = height_algebraic(&UniPoly::from_ints(&[1, 1, 1])).unwrap();
        assert!(z3.value.abs() <= z3.error() + 1e-15);
        assert_eq!(height_algebraic(&UniPoly::from_ints(&[-1, 0, 1])), Err(HeightError::Reducible));
        // 2x - 3 is the rational 3/2 of height log 3.
        assert_eq!(arg(&height_algebraic(&UniPoly::from_ints(&[-3, 2])).unwrap()), BigInt::from(3));
    }

    #[test]
    fn mahler_measure_of_lehmer_polynomial_oracle() {
        // Lehmer's degree-10 polynomial is out of range; use a sextic with a
        // known real root structure instead: x^6 - 2 has all |roots| = 2^(1/6).
        let h = height_algebraic(&UniPoly::from_ints(&[-2, 0, 0, 0, 0, 0, 1])).unwrap();
        assert!((h.value - 2f64.ln() / 6.0).abs() < 1e-13);
        assert!(h.error() <= 1e-12);
    }

    #[test]
    fn dirichlet_examples() {
        let (q, p) = dirichlet_approx(&[RealInput::sqrt(&int(2))], 10).unwrap();
        assert_eq!((q, p), (BigInt::from(5), vec![BigInt::from(7)]));
        let (q, p) = dirichlet_approx(&[RealInput::Rational(rat(1, 3))], 4).unwrap();
        assert_eq!((q, p), (BigInt::from(3), vec![BigInt::from(1)]));
        let th = [RealInput::sqrt(&int(2)), RealInput::sqrt(&int(3))];
        let (q, p) = dirichlet_approx(&th, 5).unwrap();
        assert!(q < BigInt::from(25));
        for (t, pi) in th.iter().zip(&p) {
            assert!(t.within(&q, pi, &rat(1, 5)));
        }
    }

    #[test]
    fn relations() {
        assert_eq!(mult_relation(&[int(4), int(8)]).unwrap(), Some(vec![3, -2]));
        assert_eq!(mult_relation(&[int(2), int(3)]).unwrap(), None);
        assert_eq!(mult_relation(&[int(-1)]).unwrap(), Some(vec![1]));
        assert_eq!(mult_relation(&[int(6), rat(2, 3), int(-9)]).unwrap().map(|b| b.len()), Some(3));
        assert_eq!(mult_relation(&[int(0)]), Err(HeightError::ZeroInput));
    }

    #[test]
    fn coprime_base_handles_shared_factors() {
        // 12 = 2^2 3 and 18 = 2 3^2 share both primes but are independent.
        assert_eq!(mult_relation(&[int(12), int(18)]).unwrap(), None);
        let b = mult_relation(&[int(12), int(18), int(2)]).unwrap().unwrap();
        let v: Rational = [int(12), int(18), int(2)].iter().zip(&b).map(|(x, &e)| x.pow(e as i32)).product();
        assert!(v.abs().is_one());
    }

    #[test]
    fn bounded_enumeration() {
        let got = enumerate_bounded(2f64.ln(), 1, ENUMERATION_CAP).unwrap();
        let want: Vec<Vec<Rational>> = [rat(-2, 1), int(-1), rat(-1, 2), int(0), rat(1, 2), int(1), int(2)].into_iter().map(|x| vec![x]).collect();
        assert_eq!(got, want);
        assert_eq!(enumerate_bounded(0.0, 1, ENUMERATION_CAP).unwrap().len(), 3);
        assert_eq!(enumerate_bounded(1.5f64.ln(), 1, ENUMERATION_CAP).unwrap().len(), 3);
        assert_eq!(enumerate_bounded(2f64.ln(), 2, 5), Err(HeightError::BudgetExceeded(5)));
        // Pairs: (1/2, 1/3) has height log 6 and is excluded at bound log 3.
        let pairs = enumerate_bounded(3f64.ln(), 2, ENUMERATION_CAP).unwrap();
        assert!(!pairs.contains(&vec![rat(1, 2), rat(1, 3)]));
        assert!(pairs.contains(&vec![rat(1, 3), rat(2, 3)]));
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-2000i64..2000, 1i64..2000).prop_filter_map("nonzero", |(p, q)| if p == 0 { None } else { Some(rat(p, q)) })
    }

    proptest! {
        #[test]
        fn homogeneity(x in arb_rat(), k in -10i32..=10) {
            let h1 = arg(&height_point(&[x.clone()], HeightMode::Affine).unwrap());
            let hk = arg(&height_point(&[x.pow(k)], HeightMode::Affine).unwrap());
            prop_assert_eq!(hk, h1.pow(k.unsigned_abs()));
        }

        #[test]
        fn projective_invariance(v in prop::collection::vec(arb_rat(), 1..5), l in arb_rat()) {
            let a = height_point(&v, HeightMode::Projective).unwrap();
            let w: Vec<Rational> = v.iter().map(|x| x * &l).collect();
            prop_assert_eq!(a, height_point(&w, HeightMode::Projective).unwrap());
        }

        #[test]
        fn subadditivity(x in arb_rat(), y in arb_rat()) {
            let h = |z: Rational| height_point(&[z], HeightMode::Affine).unwrap().value;
            prop_assert!(h(&x * &y) <= h(x.clone()) + h(y.clone()) + 1e-9);
            prop_assert!(h(&x + &y) <= h(x) + h(y) + 2f64.ln() + 1e-9);
        }

        #[test]
        fn relation_matches_brute_force(e in prop::collection::vec(prop::collection::vec(-3i32..=3, 3), 3)) {
            // r_i = 2^a 3^b 5^c with a sign flip on odd rows.
            let r: Vec<Rational> = e.iter().enumerate().map(|(i, v)| {
                let x = int(2).pow(v[0]) * int(3).pow(v[1]) * int(5).pow(v[2]);
                if i % 2 == 1 { -x } else { x }
            }).collect();
            let got = mult_relation(&r).unwrap();
            let mut best: Option<i64> = None;
            for a in -8i64..=8 { for b in -8i64..=8 { for c in -8i64..=8 {
                if (a, b, c) == (0, 0, 0) { continue; }
                let v = r[0].pow(a as i32) * r[1].pow(b as i32) * r[2].pow(c as i32);
                if v.abs().is_one() {
                    let s = a.abs().max(b.abs()).max(c.abs());
                    best = Some(best.map_or(s, |t: i64| t.min(s)));
                }
            }}}
            match (got, best) {
                (Some(b), Some(s)) => prop_assert_eq!(b.iter().map(|x| x.abs()).max().unwrap(), s),
                (None, None) => {}
                (Some(b), None) => prop_assert!(b.iter().map(|x| x.abs()).max().unwrap() > 8),
                (None, Some(_)) => prop_assert!(false, "missed relation"),
            }
        }

        #[test]
        fn places_reconstruct(x in arb_rat()) {
            let d = place_decomposition(&x).unwrap();
            prop_assert_eq!(d.reconstruct(), x.clone());
            prop_assert!(d.product_formula_holds());
            let h = height_point(&[x], HeightMode::Affine).unwrap().value;
            prop_assert!((d.local_height_sum() - h).abs() < 1e-9);
        }
    }
}
