use super::upoly::divisors;
use super::{char_poly, QMatrix, Rational, Scalar, UniPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumberFieldError {
    #[error("defining polynomial is reducible over Q")]
    Reducible,
    #[error("defining polynomial must have degree between 1 and 6, got {0}")]
    UnsupportedDegree(usize),
    #[error("basis is linearly dependent over Q")]
    DependentBasis,
    #[error("basis length {got} does not match field degree {want}")]
    WrongBasisLength { got: usize, want: usize },
}

/// Monic modulus of a simple algebraic extension Q[x]/(m).
#[derive(Debug, PartialEq, Eq)]
pub struct Modulus {
    poly: UniPoly,
}

impl Modulus {
    pub fn new(poly: &UniPoly) -> Arc<Self> {
        Arc::new(Modulus { poly: poly.monic() })
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }
}

/// Element of Q[x]/(m) in the power basis.
#[derive(Clone, Debug)]
pub struct FieldElement {
    m: Arc<Modulus>,
    c: UniPoly,
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && (Arc::ptr_eq(&self.m, &o.m) || self.m == o.m)
    }
}

impl FieldElement {
    pub fn from_poly(m: &Arc<Modulus>, p: &UniPoly) -> Self {
        FieldElement { m: m.clone(), c: p.rem(&m.poly) }
    }

    pub fn from_coords(m: &Arc<Modulus>, c: &[Rational]) -> Self {
        Self::from_poly(m, &UniPoly::new(c.to_vec()))
    }

    pub fn rational(m: &Arc<Modulus>, r: &Rational) -> Self {
        Self::from_poly(m, &UniPoly::constant(r.clone()))
    }

    pub fn generator(m: &Arc<Modulus>) -> Self {
        Self::from_poly(m, &UniPoly::x())
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.m
    }

    pub fn as_poly(&self) -> &UniPoly {
        &self.c
    }

    /// Coordinates in the power basis, padded to the degree.
    pub fn coords(&self) -> Vec<Rational> {
        (0..self.m.degree()).map(|i| self.c.coeff(i)).collect()
    }

    /// Matrix of multiplication by `self` acting on column coordinates.
    pub fn mult_matrix(&self) -> QMatrix {
        let d = self.m.degree();
        let mut mat = QMatrix::zeros(d, d);
        let mut b = UniPoly::one();
        for j in 0..d {
            let col = self.c.mul(&b).rem(&self.m.poly);
            for i in 0..d {
                mat[(i, j)] = col.coeff(i);
            }
            b = b.mul(&UniPoly::x());
        }
        mat
    }

    pub fn trace(&self) -> Rational {
        self.mult_matrix().trace()
    }

    pub fn norm(&self) -> Rational {
        self.mult_matrix().det()
    }

    /// Minimal polynomial over Q: the square-free part of the characteristic
    /// polynomial of the multiplication map.
    pub fn min_poly(&self) -> UniPoly {
        char_poly(&self.mult_matrix()).squarefree_part()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.c.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.c.coeff(0)),
            _ => None,
        }
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        FieldElement { m: self.m.clone(), c: UniPoly::zero() }
    }
    fn one_like(&self) -> Self {
        FieldElement { m: self.m.clone(), c: UniPoly::one() }
    }
    fn lift(&self, r: &Rational) -> Self {
        FieldElement { m: self.m.clone(), c: UniPoly::constant(r.clone()) }
    }
    fn is_zero_elem(&self) -> bool {
        self.c.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        FieldElement { m: self.m.clone(), c: self.c.add(&o.c) }
    }
    fn sub(&self, o: &Self) -> Self {
        FieldElement { m: self.m.clone(), c: self.c.sub(&o.c) }
    }
    fn mul(&self, o: &Self) -> Self {
        FieldElement { m: self.m.clone(), c: self.c.mul(&o.c).rem(&self.m.poly) }
    }
    fn neg(&self) -> Self {
        FieldElement { m: self.m.clone(), c: self.c.neg() }
    }
    fn inv(&self) -> Option<Self> {
        if self.c.is_zero() {
            return None;
        }
        let (g, s, _) = self.c.ext_gcd(&self.m.poly);
        if g.degree() != Some(0) {
            return None;
        }
        Some(FieldElement { m: self.m.clone(), c: s.rem(&self.m.poly) })
    }
}

/// A real root of an irreducible polynomial, isolated in `(lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub lo: Rational,
    pub hi: Rational,
}

impl RealRoot {
    pub fn approx(&self) -> f64 {
        ((&self.lo + &self.hi) / Rational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }
}

/// Number field Q(α) with α a root of an irreducible rational polynomial of
/// degree at most 6.
#[derive(Clone, Debug)]
pub struct NumberField {
    modulus: Arc<Modulus>,
    real_roots: Vec<RealRoot>,
}

impl NumberField {
    pub fn new(minpoly: &UniPoly) -> Result<Self, NumberFieldError> {
        let d = minpoly.degree().unwrap_or(0);
        if !(1..=6).contains(&d) {
            return Err(NumberFieldError::UnsupportedDegree(d));
        }
        if !is_irreducible(minpoly) {
            return Err(NumberFieldError::Reducible);
        }
        let modulus = Modulus::new(minpoly);
        let real_roots = modulus.poly.isolate_real_roots().into_iter().map(|(lo, hi)| RealRoot { lo, hi }).collect();
        Ok(NumberField { modulus, real_roots })
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }

    pub fn minpoly(&self) -> &UniPoly {
        &self.modulus.poly
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    pub fn real_roots(&self) -> &[RealRoot] {
        &self.real_roots
    }

    pub fn is_totally_real(&self) -> bool {
        self.real_roots.len() == self.degree()
    }

    pub fn element(&self, coords: &[Rational]) -> FieldElement {
        FieldElement::from_coords(&self.modulus, coords)
    }

    pub fn gen(&self) -> FieldElement {
        FieldElement::generator(&self.modulus)
    }

    pub fn rational(&self, r: &Rational) -> FieldElement {
        FieldElement::rational(&self.modulus, r)
    }

    /// Gram matrix `Tr(r_i r_j)` of the trace form.
    pub fn trace_gram(&self, basis: &[FieldElement]) -> QMatrix {
        let n = basis.len();
        let mut g = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = basis[i].mul(&basis[j]).trace();
                g[(i, j)] = t.clone();
                g[(j, i)] = t;
            }
        }
        g
    }

    /// Basis `s` with `Tr(r_i s_j) = δ_ij`.
    pub fn trace_dual_basis(&self, basis: &[FieldElement]) -> Result<Vec<FieldElement>, NumberFieldError> {
        if basis.len() != self.degree() {
            return Err(NumberFieldError::WrongBasisLength { got: basis.len(), want: self.degree() });
        }
        let g = self.trace_gram(basis);
        let inv = g.inverse().ok_or(NumberFieldError::DependentBasis)?;
        Ok((0..basis.len())
            .map(|j| {
                (0..basis.len()).fold(self.rational(&Rational::zero()), |acc, k| {
                    acc.add(&basis[k].mul(&self.rational(&inv[(j, k)])))
                })
            })
            .collect())
    }

    /// Real embeddings of an element, evaluated at refined roots.
    pub fn embeddings_f64(&self, x: &FieldElement) -> Vec<f64> {
        let seq = self.modulus.poly.sturm_sequence();
        let w = Rational::new(BigInt::one(), BigInt::from(1u64 << 60));
        self.real_roots
            .iter()
            .map(|r| {
                let (lo, hi) = UniPoly::refine_root(&seq, &r.lo, &r.hi, &w);
                x.as_poly().eval_f64(((lo + hi) / Rational::from_integer(2.into())).to_f64().unwrap())
            })
            .collect()
    }
}

/// Cyclotomic field Q(ζ_N), N ≤ 24.
#[derive(Clone, Debug)]
pub struct CycloField {
    n: u32,
    modulus: Arc<Modulus>,
}

impl CycloField {
    pub fn new(n: u32) -> Self {
        assert!((1..=24).contains(&n), "cyclotomic order must be in 1..=24");
        CycloField { n, modulus: Modulus::new(&cyclotomic_poly(n)) }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    /// `ζ_N^k`.
    pub fn zeta(&self, k: i64) -> FieldElement {
        let e = k.rem_euclid(self.n as i64) as u32;
        FieldElement::from_poly(&self.modulus, &UniPoly::x().pow(e))
    }

    pub fn rational(&self, r: &Rational) -> FieldElement {
        FieldElement::rational(&self.modulus, r)
    }

    /// Complex value under the embedding ζ ↦ exp(2πi/N).
    pub fn to_complex(&self, x: &FieldElement) -> num_complex::Complex64 {
        let z = num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.n as f64);
        x.as_poly()
            .coeffs()
            .iter()
            .rev()
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, a| acc * z + a.to_f64().unwrap_or(f64::NAN))
    }

    /// Complex conjugate, ζ ↦ ζ^{-1}.
    pub fn conj(&self, x: &FieldElement) -> FieldElement {
        let zi = self.zeta(-1);
        x.as_poly().eval_in(&zi)
    }
}

/// N-th cyclotomic polynomial by exact division of x^N - 1.
pub fn cyclotomic_poly(n: u32) -> UniPoly {
    let mut p = UniPoly::x().pow(n).sub(&UniPoly::one());
    for d in 1..n {
        if n % d == 0 {
            p = p.divrem(&cyclotomic_poly(d)).0;
        }
    }
    p
}

/// Irreducibility over Q for degree ≤ 6: rational root test, then Kronecker's
/// interpolation search for factors of degree 2 and 3.
pub fn is_irreducible(f: &UniPoly) -> bool {
    let d = match f.degree() {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    if !f.rational_roots().is_empty() {
        return false;
    }
    let p = UniPoly::from_bigints(&f.primitive_integer());
    (2..=d / 2).all(|k| !has_factor_of_degree(&p, k))
}

fn has_factor_of_degree(f: &UniPoly, k: usize) -> bool {
    // Interpolation nodes with few divisors keep the search small.
    let mut nodes: Vec<(i64, Vec<BigInt>)> = (-12i64..=12)
        .filter_map(|a| {
            let v = f.eval(&Rational::from_integer(a.into())).to_integer();
            (!v.is_zero()).then(|| (a, divisors(&v.abs())))
        })
        .collect();
    nodes.sort_by_key(|(a, ds)| (ds.len(), a.abs()));
    nodes.truncate(k + 1);
    if nodes.len() < k + 1 {
        return true;
    }
    let xs: Vec<Rational> = nodes.iter().map(|(a, _)| Rational::from_integer((*a).into())).collect();
    let choices: Vec<Vec<BigInt>> = nodes
        .iter()
        .enumerate()
        .map(|(i, (_, ds))| {
            if i == 0 {
                ds.clone()
            } else {
                ds.iter().flat_map(|x| [x.clone(), -x.clone()]).collect()
            }
        })
        .collect();
    let mut idx = vec![0usize; k + 1];
    loop {
        let ys: Vec<Rational> = (0..=k).map(|i| Rational::from_integer(choices[i][idx[i]].clone())).collect();
        let g = lagrange(&xs, &ys);
        if g.degree() == Some(k) && g.coeffs().iter().all(|c| c.is_integer()) && f.rem(&g).is_zero() {
            return true;
        }
        let mut i = 0;
        loop {
            if i > k {
                return false;
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn lagrange(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let mut acc = UniPoly::zero();
    for i in 0..xs.len() {
        let mut term = UniPoly::constant(ys[i].clone());
        for j in 0..xs.len() {
            if i != j {
                let den = &xs[i] - &xs[j];
                term = term.mul(&UniPoly::new(vec![-&xs[j] / &den, den.recip()]));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

impl Scalar for num_complex::Complex64 {
    fn zero_like(&self) -> Self {
        num_complex::Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        num_complex::Complex64::new(1.0, 0.0)
    }
    fn lift(&self, r: &Rational) -> Self {
        num_complex::Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn is_zero_elem(&self) -> bool {
        self.norm() == 0.0
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
        (self.norm() != 0.0).then(|| 1.0 / self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn cubic7() -> NumberField {
        NumberField::new(&UniPoly::from_ints(&[-1, -2, 1, 1])).unwrap()
    }

    #[test]
    fn quadratic_and_cubic_fields_are_totally_real() {
        let q = NumberField::new(&UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(q.real_roots().len(), 2);
        assert!(q.is_totally_real());
        assert_eq!(cubic7().real_roots().len(), 3);
        assert_eq!(NumberField::new(&UniPoly::from_ints(&[-1, 0, 1])).unwrap_err(), NumberFieldError::Reducible);
    }

    #[test]
    fn kronecker_finds_quadratic_factors() {
        // (x^2+1)(x^2+x+1) has no rational root but is reducible.
        let f = UniPoly::from_ints(&[1, 0, 1]).mul(&UniPoly::from_ints(&[1, 1, 1]));
        assert!(!is_irreducible(&f));
        let g = UniPoly::from_ints(&[2, 0, 0, 1]).mul(&UniPoly::from_ints(&[-3, 1, 0, 1]));
        assert!(!is_irreducible(&g));
        assert!(is_irreducible(&UniPoly::from_ints(&[-1, -1, 0, 0, 1])));
        assert!(is_irreducible(&UniPoly::from_ints(&[1, 0, 0, 0, 0, 0, 1]).add(&UniPoly::from_ints(&[0, 1]))));
    }

    #[test]
    fn trace_gram_of_power_basis() {
        let k = cubic7();
        let a = k.gen();
        let basis = vec![k.rational(&int(1)), a.clone(), a.mul(&a)];
        let g = k.trace_gram(&basis);
        assert_eq!(g, QMatrix::from_ints(&[&[3, -1, 5], &[-1, 5, -4], &[5, -4, 13]]));
        let dual = k.trace_dual_basis(&basis).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(basis[i].mul(&dual[j]).trace(), int((i == j) as i64));
            }
        }
        let dep = vec![k.rational(&int(1)), a.clone(), a.add(&k.rational(&int(1)))];
        assert_eq!(k.trace_dual_basis(&dep).unwrap_err(), NumberFieldError::DependentBasis);
    }

    #[test]
    fn minimal_polynomials() {
        let q = NumberField::new(&UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(q.rational(&int(2)).min_poly(), UniPoly::from_ints(&[-2, 1]));
        assert_eq!(q.gen().min_poly(), UniPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(q.gen().add(&q.rational(&int(1))).min_poly(), UniPoly::from_ints(&[-1, -2, 1]));
    }

    #[test]
    fn inverse_in_field() {
        let k = cubic7();
        let x = k.element(&[rat(1, 2), int(3), int(-1)]);
        assert!(x.mul(&x.inv().unwrap()).is_one_elem());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), UniPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), UniPoly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(12), UniPoly::from_ints(&[1, 0, -1, 0, 1]));
        let c = CycloField::new(7);
        assert!(c.zeta(7).is_one_elem());
        assert!(c.zeta(3).mul(&c.zeta(4)).is_one_elem());
        let z = c.to_complex(&c.zeta(1));
        assert!((z.arg() - 2.0 * std::f64::consts::PI / 7.0).abs() < 1e-12);
    }
}
