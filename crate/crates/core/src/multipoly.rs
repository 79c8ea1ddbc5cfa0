//! Sparse multivariate polynomials and Laurent polynomials over Q.

use crate::exactnum::{Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use thiserror::Error;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

/// Polynomial in a fixed number of variables. In Laurent mode exponents may be
/// negative.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    nvars: usize,
    laurent: bool,
    terms: BTreeMap<Monomial, Rational>,
}

/// Equality ignores the Laurent flag.
impl PartialEq for MultiPoly {
    fn eq(&self, o: &Self) -> bool {
        self.nvars == o.nvars && self.terms == o.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, laurent: false, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<i32>, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let laurent = exps.iter().any(|&e| e < 0);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(exps), c);
        }
        MultiPoly { nvars, laurent, terms }
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Vec<i32>, Rational)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial(e), c);
        }
        p.laurent = p.terms.keys().any(|m| !m.is_polynomial());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }

    pub fn set_laurent(mut self, on: bool) -> Self {
        self.laurent = on || self.terms.keys().any(|m| !m.is_polynomial());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i32]) -> Rational {
        self.terms.get(&Monomial(e.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Vec<Vec<i32>> {
        self.terms.keys().map(|m| m.0.clone()).collect()
    }

    /// Largest total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.0.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r.laurent |= o.laurent;
        r
    }

    pub fn neg(&self) -> Self {
        MultiPoly { nvars: self.nvars, laurent: self.laurent, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: &Rational) -> Self {
        if a.is_zero() {
            return Self::zero(self.nvars).set_laurent(self.laurent);
        }
        MultiPoly { nvars: self.nvars, laurent: self.laurent, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * a)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let mut r = Self::zero(self.nvars);
        r.laurent = self.laurent || o.laurent;
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars).set_laurent(self.laurent);
        let mut b = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Inverse of a single Laurent term.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Some(Self::monomial(self.nvars, m.0.iter().map(|e| -e).collect(), c.recip()).set_laurent(true))
    }

    /// Multiplies by the monomial that makes every exponent non-negative with
    /// minimal degree; the result is an ordinary polynomial.
    pub fn clear_denominators_monomial(&self) -> Self {
        let mut shift = vec![0i32; self.nvars];
        for m in self.terms.keys() {
            for (s, &e) in shift.iter_mut().zip(&m.0) {
                *s = (*s).min(e);
            }
        }
        MultiPoly {
            nvars: self.nvars,
            laurent: false,
            terms: self.terms.iter().map(|(m, c)| (Monomial(m.0.iter().zip(&shift).map(|(e, s)| e - s).collect()), c.clone())).collect(),
        }
    }

    /// Divides out the largest monomial factor.
    pub fn strip_monomial_factor(&self) -> Self {
        let mut low: Option<Vec<i32>> = None;
        for m in self.terms.keys() {
            low = Some(match low {
                None => m.0.clone(),
                Some(l) => l.iter().zip(&m.0).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        let Some(low) = low else { return self.clone() };
        MultiPoly {
            nvars: self.nvars,
            laurent: self.laurent,
            terms: self.terms.iter().map(|(m, c)| (Monomial(m.0.iter().zip(&low).map(|(e, s)| e - s).collect()), c.clone())).collect(),
        }
    }

    /// Integer primitive multiple with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let g = self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&l / c.denom()))));
        let lead = self.terms.values().next_back().unwrap();
        let s = if lead.is_negative() { -g } else { g };
        self.scale(&Rational::new(l, s))
    }

    /// Makes the leading coefficient (largest graded-lex term) one.
    pub fn monic(&self) -> Self {
        match self.terms.values().next_back() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Partial derivative in variable `i`.
    pub fn diff(&self, i: usize) -> Self {
        let mut r = Self::zero(self.nvars);
        r.laurent = self.laurent;
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e != 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                r.add_term(m2, c * Rational::from_integer(e.into()));
            }
        }
        r
    }

    /// Evaluates at a point of any exact field (or Complex64). Fails only on a
    /// negative power of zero.
    pub fn eval<S: Scalar>(&self, pt: &[S]) -> Option<S> {
        assert_eq!(pt.len(), self.nvars);
        let mut cache: Vec<BTreeMap<i32, S>> = vec![BTreeMap::new(); self.nvars];
        let mut acc = pt.first().map(|p| p.zero_like())?;
        for (m, c) in &self.terms {
            let mut t = pt[0].lift(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = match cache[i].get(&e) {
                    Some(p) => p.clone(),
                    None => {
                        let p = pt[i].pow(e as i64)?;
                        cache[i].insert(e, p.clone());
                        p
                    }
                };
                t = t.mul(&p);
            }
            acc = acc.add(&t);
        }
        Some(acc)
    }

    /// Rational evaluation at rationals.
    pub fn eval_q(&self, pt: &[Rational]) -> Option<Rational> {
        if self.nvars == 0 {
            return self.constant_value();
        }
        self.eval(pt)
    }

    /// Sum of `|c| * prod |x_i|^e`, the scale against which a numeric
    /// evaluation should be compared.
    pub fn abs_scale(&self, pt: &[num_complex::Complex64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64().unwrap().abs() * m.0.iter().zip(pt).map(|(&e, x)| x.norm().powi(e)).product::<f64>())
            .sum()
    }

    /// Substitutes `subs[i]` for variable `i`; all substitutions share one
    /// target ring. Negative exponents need invertible (single-term) images.
    pub fn compose(&self, subs: &[MultiPoly]) -> Option<MultiPoly> {
        assert_eq!(subs.len(), self.nvars);
        let n = subs.first().map_or(0, |s| s.nvars);
        let mut cache: Vec<BTreeMap<i32, MultiPoly>> = vec![BTreeMap::new(); self.nvars];
        let mut acc = MultiPoly::zero(n);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = match cache[i].get(&e) {
                    Some(p) => p.clone(),
                    None => {
                        let base = if e < 0 { subs[i].monomial_inverse()? } else { subs[i].clone() };
                        let p = base.pow(e.unsigned_abs());
                        cache[i].insert(e, p.clone());
                        p
                    }
                };
                t = t.mul(&p);
            }
            acc = acc.add(&t);
        }
        Some(acc)
    }

    /// Re-indexes into a ring with `nvars` variables; variable `i` goes to
    /// `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> MultiPoly {
        assert_eq!(map.len(), self.nvars);
        MultiPoly::from_terms(
            nvars,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; nvars];
                for (i, &x) in m.0.iter().enumerate() {
                    e[map[i]] += x;
                }
                (e, c.clone())
            }),
        )
        .set_laurent(self.laurent)
    }

    /// Groups terms by `J = E·I` for the `r x n` exponent matrix `E`. Each part
    /// keeps its exponents `I`, read as a polynomial in the translate
    /// coordinates `a`. Parts are sorted by `J`.
    pub fn substitute_torus(&self, e: &[Vec<i64>]) -> Vec<(Vec<i64>, MultiPoly)> {
        let mut parts: BTreeMap<Vec<i64>, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let j: Vec<i64> = e.iter().map(|row| row.iter().zip(&m.0).map(|(a, b)| a * *b as i64).sum()).collect();
            parts.entry(j).or_insert_with(|| MultiPoly::zero(self.nvars).set_laurent(self.laurent)).add_term(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// Division with remainder by one polynomial in graded-lex order; returns
    /// the quotient when the division is exact.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (ld, lc) = d.terms.iter().next_back()?;
        let mut r = self.clone();
        let mut q = MultiPoly::zero(self.nvars);
        while let Some((lm, c)) = r.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let e: Vec<i32> = lm.0.iter().zip(&ld.0).map(|(a, b)| a - b).collect();
            if e.iter().any(|&x| x < 0) {
                return None;
            }
            let t = MultiPoly::monomial(self.nvars, e, c / lc);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn parse(s: &str, vars: &[&str], laurent: bool) -> Result<MultiPoly, SyntaxError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0, vars, laurent };
        let r = p.expr()?;
        p.skip_ws();
        if p.pos < p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(r.set_laurent(laurent))
    }

    /// Canonical text form: terms by decreasing graded-lex order.
    pub fn display(&self, vars: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| if e == 1 { vars[i].to_string() } else { format!("{}^{}", vars[i], e) })
                .collect();
            let neg = c.is_negative();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono.join("*"));
            } else {
                s.push_str(&format!("{}*{}", a, mono.join("*")));
            }
        }
        s
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
    laurent: bool,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SyntaxError {
        SyntaxError { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<MultiPoly, SyntaxError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, SyntaxError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor()?;
                    match d.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        _ => return Err(SyntaxError { pos: at, msg: "division by a non-constant or zero".into() }),
                    }
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, SyntaxError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let neg = match self.s.get(self.pos) {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected integer exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("exponent too large"))?;
            if neg {
                if !self.laurent {
                    return Err(SyntaxError { pos: start - 1, msg: "negative exponent outside Laurent mode".into() });
                }
                let inv = base.monomial_inverse().ok_or_else(|| self.err("negative power of a non-monomial"))?;
                return Ok(inv.pow(e));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MultiPoly, SyntaxError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let v: BigInt = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap();
                Ok(MultiPoly::constant(self.n(), Rational::from_integer(v)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(MultiPoly::var(self.n(), i)),
                    None => Err(SyntaxError { pos: start, msg: format!("unknown variable '{name}'") }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, &XYZ, false).unwrap()
    }

    #[test]
    fn parse_and_arithmetic() {
        assert_eq!(p("(x+1)^2"), p("x^2 + 2*x + 1"));
        assert_eq!(p("3/2*x^2 - 5").coeff(&[2, 0, 0]), rat(3, 2));
        assert_eq!(p("x y"), p("x*y"));
        assert_eq!(p("(x - y)*(x + y)"), p("x^2 - y^2"));
    }

    #[test]
    fn negative_exponent_rules() {
        let e = MultiPoly::parse("x^-1 + 1", &XYZ, false).unwrap_err();
        assert!(e.msg.contains("negative exponent"));
        let l = MultiPoly::parse("x^-1 + 1", &XYZ, true).unwrap();
        assert!(l.is_laurent());
        assert_eq!(l.mul(&p("x")), p("1 + x"));
        assert!(MultiPoly::parse("x/(y+1)", &XYZ, false).is_err());
        assert!(MultiPoly::parse("x + w", &XYZ, false).is_err());
    }

    #[test]
    fn torus_substitution_parts() {
        let f = p("x*y*z + x + y + z");
        let parts = f.substitute_torus(&[vec![1, 0, 0]]);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (vec![0], p("y + z")));
        assert_eq!(parts[1], (vec![1], p("x*y*z + x")));
        let g = MultiPoly::parse("x + y + 1", &["x", "y"], false).unwrap();
        let parts = g.substitute_torus(&[vec![1, -1]]);
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|(_, q)| q.nterms() == 1));
    }

    #[test]
    fn evaluation_and_derivative() {
        let f = p("x^2*y - 3*z + 1/2");
        assert_eq!(f.eval_q(&[int(2), int(3), int(1)]), Some(rat(19, 2)));
        assert_eq!(f.diff(0), p("2*x*y"));
        let l = MultiPoly::parse("x^-2", &XYZ, true).unwrap();
        assert_eq!(l.eval_q(&[int(2), int(1), int(1)]), Some(rat(1, 4)));
        assert_eq!(l.eval_q(&[int(0), int(1), int(1)]), None);
    }

    #[test]
    fn exact_division() {
        let f = p("x^3 - y^3");
        assert_eq!(f.div_exact(&p("x - y")), Some(p("x^2 + x*y + y^2")));
        assert_eq!(f.div_exact(&p("x + y")), None);
    }

    fn arb_poly(laurent: bool) -> impl Strategy<Value = MultiPoly> {
        let lo = if laurent { -3 } else { 0 };
        prop::collection::vec((prop::collection::vec(lo..4i32, 3), -20i64..20, 1i64..5), 0..8)
            .prop_map(move |ts| MultiPoly::from_terms(3, ts.into_iter().map(|(e, a, b)| (e, rat(a, b)))).set_laurent(laurent))
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(f in arb_poly(true)) {
            let s = f.display(&XYZ);
            prop_assert_eq!(MultiPoly::parse(&s, &XYZ, true).unwrap(), f);
        }

        #[test]
        fn ring_axioms(a in arb_poly(false), b in arb_poly(false), c in arb_poly(false)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn torus_parts_partition_support(f in arb_poly(true), e in prop::collection::vec(-3i64..4, 3)) {
            let parts = f.substitute_torus(&[e.clone()]);
            let total = parts.iter().fold(MultiPoly::zero(3).set_laurent(true), |acc, (_, q)| acc.add(q));
            prop_assert_eq!(total, f.clone());
            for (j, q) in &parts {
                for m in q.support() {
                    let d: i64 = m.iter().zip(&e).map(|(a, b)| *a as i64 * b).sum();
                    prop_assert_eq!(d, j[0]);
                }
            }
        }
    }
}
