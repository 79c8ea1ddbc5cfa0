//! Buchberger's algorithm over Q with the sugar strategy and the
//! Gebauer-Möller criteria, plus elimination and saturation built on it.
//!
//! Coefficients are kept as integers with content removed; every operation
//! runs under an explicit [`Budget`] and reports exhaustion instead of
//! running unbounded.

use crate::multipoly::MultiPoly;
use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::time::Instant;
use thiserror::Error;

const MAXV: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TermOrder {
    Lex,
    Grevlex,
    /// Block order: the first `k` variables (grevlex) dominate the rest
    /// (grevlex). Eliminates the first block.
    Elim(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_pairs: u64,
    pub max_degree: u32,
    pub max_basis: usize,
    pub max_millis: Option<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 100_000, max_degree: 60, max_basis: 5_000, max_millis: None }
    }
}

impl Budget {
    pub fn extended() -> Self {
        Budget { max_pairs: 1_000_000, max_degree: 120, max_basis: 20_000, max_millis: None }
    }

    pub fn stretch() -> Self {
        Budget { max_pairs: 10_000_000, max_degree: 250, max_basis: 100_000, max_millis: None }
    }

    pub fn with_millis(mut self, ms: u64) -> Self {
        self.max_millis = Some(ms);
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
pub enum GroebnerError {
    #[error("resource limit reached: {0}")]
    ResourceExhausted(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Mon {
    deg: u16,
    e: [u8; MAXV],
}

impl Mon {
    fn one() -> Self {
        Mon { deg: 0, e: [0; MAXV] }
    }

    fn mul(&self, o: &Mon) -> Mon {
        let mut e = [0u8; MAXV];
        for i in 0..MAXV {
            e[i] = self.e[i] + o.e[i];
        }
        Mon { deg: self.deg + o.deg, e }
    }

    fn divides(&self, o: &Mon) -> bool {
        self.deg <= o.deg && (0..MAXV).all(|i| self.e[i] <= o.e[i])
    }

    fn div(&self, d: &Mon) -> Mon {
        let mut e = [0u8; MAXV];
        for i in 0..MAXV {
            e[i] = self.e[i] - d.e[i];
        }
        Mon { deg: self.deg - d.deg, e }
    }

    fn lcm(&self, o: &Mon) -> Mon {
        let mut e = [0u8; MAXV];
        let mut deg = 0u16;
        for i in 0..MAXV {
            e[i] = self.e[i].max(o.e[i]);
            deg += e[i] as u16;
        }
        Mon { deg, e }
    }

    fn coprime(&self, o: &Mon) -> bool {
        (0..MAXV).all(|i| self.e[i] == 0 || o.e[i] == 0)
    }
}

#[derive(Clone, Copy, Debug)]
struct Ord_ {
    kind: TermOrder,
    n: usize,
}

impl Ord_ {
    fn revlex(a: &Mon, b: &Mon, lo: usize, hi: usize) -> Ordering {
        for i in (lo..hi).rev() {
            if a.e[i] != b.e[i] {
                return b.e[i].cmp(&a.e[i]);
            }
        }
        Ordering::Equal
    }

    fn cmp(&self, a: &Mon, b: &Mon) -> Ordering {
        match self.kind {
            TermOrder::Lex => a.e[..self.n].cmp(&b.e[..self.n]),
            TermOrder::Grevlex => a.deg.cmp(&b.deg).then_with(|| Self::revlex(a, b, 0, self.n)),
            TermOrder::Elim(k) => {
                let da: u16 = a.e[..k].iter().map(|&x| x as u16).sum();
                let db: u16 = b.e[..k].iter().map(|&x| x as u16).sum();
                da.cmp(&db)
                    .then_with(|| Self::revlex(a, b, 0, k))
                    .then_with(|| (a.deg - da).cmp(&(b.deg - db)))
                    .then_with(|| Self::revlex(a, b, k, self.n))
            }
        }
    }
}

/// Integer polynomial, terms sorted by decreasing monomial.
#[derive(Clone, Debug)]
struct Poly {
    t: Vec<(Mon, BigInt)>,
}

impl Poly {
    fn is_zero(&self) -> bool {
        self.t.is_empty()
    }

    fn lm(&self) -> Mon {
        self.t[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.t[0].1
    }

    fn make_primitive(&mut self) {
        let mut g = BigInt::zero();
        for (_, c) in &self.t {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.t.first().map_or(false, |(_, c)| c.is_negative()) {
            g = -g;
        }
        if !g.is_zero() && !g.is_one() {
            for (_, c) in self.t.iter_mut() {
                *c = &*c / &g;
            }
        }
    }

    /// `a*self - b*m*g`.
    fn axpy(&self, a: &BigInt, b: &BigInt, m: &Mon, g: &Poly, ord: &Ord_) -> Poly {
        let mut out = Vec::with_capacity(self.t.len() + g.t.len());
        let (mut i, mut j) = (0, 0);
        let a_one = a.is_one();
        while i < self.t.len() || j < g.t.len() {
            let gm = g.t.get(j).map(|(x, _)| x.mul(m));
            let c = match (self.t.get(i), gm) {
                (Some((x, _)), Some(y)) => ord.cmp(x, &y),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match c {
                Ordering::Greater => {
                    let (x, cx) = &self.t[i];
                    out.push((*x, if a_one { cx.clone() } else { a * cx }));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm.unwrap(), -(b * &g.t[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = (if a_one { self.t[i].1.clone() } else { a * &self.t[i].1 }) - b * &g.t[j].1;
                    if !v.is_zero() {
                        out.push((self.t[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { t: out }
    }
}

struct Engine {
    ord: Ord_,
    budget: Budget,
    start: Instant,
    pairs_done: u64,
}

impl Engine {
    fn check_time(&self) -> Result<(), GroebnerError> {
        if let Some(ms) = self.budget.max_millis {
            if self.start.elapsed().as_millis() as u64 > ms {
                return Err(GroebnerError::ResourceExhausted(format!("time limit of {ms} ms")));
            }
        }
        Ok(())
    }

    /// Full fraction-free reduction. Returns `(r, k)` with `k*f ≡ r` modulo the
    /// basis and `r` fully reduced; `k` is a positive integer.
    fn reduce(&self, f: &Poly, basis: &[Poly], active: &[bool]) -> Result<(Poly, BigInt), GroebnerError> {
        let mut f = f.clone();
        let mut rem: Vec<(Mon, BigInt)> = Vec::new();
        let mut mult = BigInt::one();
        let mut steps = 0usize;
        while !f.is_zero() {
            let (m, c) = f.t[0].clone();
            let div = basis.iter().enumerate().find(|(i, g)| active[*i] && g.lm().divides(&m));
            match div {
                Some((_, g)) => {
                    let gc = g.lc();
                    let d = c.gcd(gc);
                    let a = gc / &d;
                    let b = &c / &d;
                    let q = m.div(&g.lm());
                    // Drop the leading term explicitly: it cancels.
                    let tail = Poly { t: f.t[1..].to_vec() };
                    let gt = Poly { t: g.t[1..].to_vec() };
                    f = tail.axpy(&a, &b, &q, &gt, &self.ord);
                    if !a.is_one() {
                        for (_, x) in rem.iter_mut() {
                            *x *= &a;
                        }
                        mult *= &a;
                    }
                    steps += 1;
                    if steps % 32 == 0 {
                        self.shrink(&mut f, &mut rem, &mut mult);
                        self.check_time()?;
                    }
                }
                None => {
                    rem.push((m, c));
                    f.t.remove(0);
                }
            }
        }
        let mut r = Poly { t: rem };
        let mut z = Poly { t: vec![] };
        self.shrink(&mut r, &mut z.t, &mut mult);
        Ok((r, mult))
    }

    /// Removes the common content of the working polynomial, the remainder
    /// and the multiplier.
    fn shrink(&self, f: &mut Poly, rem: &mut Vec<(Mon, BigInt)>, mult: &mut BigInt) {
        let mut g = mult.clone();
        for (_, c) in f.t.iter().chain(rem.iter()) {
            if g.is_one() {
                return;
            }
            g = g.gcd(c);
        }
        if g.is_one() || g.is_zero() {
            return;
        }
        for (_, c) in f.t.iter_mut().chain(rem.iter_mut()) {
            *c = &*c / &g;
        }
        *mult = &*mult / &g;
    }

    fn spoly(&self, f: &Poly, g: &Poly) -> Poly {
        let l = f.lm().lcm(&g.lm());
        let (fc, gc) = (f.lc(), g.lc());
        let d = fc.gcd(gc);
        let a = gc / &d;
        let b = fc / &d;
        let mf = l.div(&f.lm());
        let mg = l.div(&g.lm());
        let ff = Poly { t: f.t[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect() };
        let gt = Poly { t: g.t[1..].to_vec() };
        ff.axpy(&a, &b, &mg, &gt, &self.ord)
    }

    fn buchberger(&mut self, input: Vec<Poly>) -> Result<Vec<Poly>, GroebnerError> {
        let mut basis: Vec<Poly> = Vec::new();
        let mut sugar: Vec<u32> = Vec::new();
        let mut active: Vec<bool> = Vec::new();
        let mut pairs: Vec<(usize, usize, Mon, u32)> = Vec::new();
        let mut gens = input;
        gens.sort_by(|a, b| self.ord.cmp(&a.lm(), &b.lm()));
        for f in gens {
            let (mut r, _) = self.reduce(&f, &basis, &active)?;
            if r.is_zero() {
                continue;
            }
            r.make_primitive();
            let s = r.t.iter().map(|(m, _)| m.deg as u32).max().unwrap();
            self.insert(r, s, &mut basis, &mut sugar, &mut active, &mut pairs)?;
        }
        while !pairs.is_empty() {
            self.check_time()?;
            // Smallest lcm first, sugar breaking ties. Sugar as the primary
            // key blew up coefficients on the surface data.
            let best = (0..pairs.len())
                .min_by(|&i, &j| self.ord.cmp(&pairs[i].2, &pairs[j].2).then(pairs[i].3.cmp(&pairs[j].3)))
                .unwrap();
            let (i, j, _, s) = pairs.swap_remove(best);
            self.pairs_done += 1;
            if self.pairs_done > self.budget.max_pairs {
                return Err(GroebnerError::ResourceExhausted(format!("{} S-pairs", self.budget.max_pairs)));
            }
            let sp = self.spoly(&basis[i], &basis[j]);
            if sp.is_zero() {
                continue;
            }
            let (mut r, _) = self.reduce(&sp, &basis, &active)?;
            if r.is_zero() {
                continue;
            }
            r.make_primitive();
            if r.lm().deg == 0 {
                return Ok(vec![Poly { t: vec![(Mon::one(), BigInt::one())] }]);
            }
            self.insert(r, s, &mut basis, &mut sugar, &mut active, &mut pairs)?;
        }
        let kept: Vec<Poly> = basis.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
        self.interreduce(kept)
    }

    /// Adds `h` to the basis and updates the pair set (Gebauer-Möller).
    fn insert(
        &self,
        h: Poly,
        s: u32,
        basis: &mut Vec<Poly>,
        sugar: &mut Vec<u32>,
        active: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize, Mon, u32)>,
    ) -> Result<(), GroebnerError> {
        let hm = h.lm();
        if hm.deg as u32 > self.budget.max_degree {
            return Err(GroebnerError::ResourceExhausted(format!("degree {}", self.budget.max_degree)));
        }
        let hi = basis.len();
        // Candidate pairs (h, g) with their lcm.
        let cand: Vec<(usize, Mon)> = (0..hi).filter(|&g| active[g]).map(|g| (g, hm.lcm(&basis[g].lm()))).collect();
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            let (ga, la) = cand[a];
            if hm.coprime(&basis[ga].lm()) {
                continue;
            }
            // Chain criterion among new pairs: drop if another lcm properly
            // divides this one, or an equal lcm appears earlier.
            for b in 0..cand.len() {
                if a == b || !keep[b] {
                    continue;
                }
                let lb = cand[b].1;
                if lb.divides(&la) && (lb != la || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        // Product criterion: coprime leading monomials need no pair.
        let new: Vec<(usize, usize, Mon, u32)> = cand
            .iter()
            .zip(&keep)
            .filter(|((g, _), k)| **k && !hm.coprime(&basis[*g].lm()))
            .map(|(&(g, l), _)| {
                let sg = (sugar[g] + (l.deg - basis[g].lm().deg) as u32).max(s + (l.deg - hm.deg) as u32);
                (g, hi, l, sg)
            })
            .collect();
        // Old pairs made redundant by h.
        pairs.retain(|&(a, b, l, _)| {
            let la = basis[a].lm().lcm(&hm);
            let lb = basis[b].lm().lcm(&hm);
            !(hm.divides(&l) && la != l && lb != l)
        });
        for g in 0..hi {
            if active[g] && hm.divides(&basis[g].lm()) {
                active[g] = false;
            }
        }
        basis.push(h);
        sugar.push(s);
        active.push(true);
        pairs.extend(new);
        let live = active.iter().filter(|&&a| a).count();
        if live > self.budget.max_basis {
            return Err(GroebnerError::ResourceExhausted(format!("basis size {}", self.budget.max_basis)));
        }
        Ok(())
    }

    fn interreduce(&self, mut g: Vec<Poly>) -> Result<Vec<Poly>, GroebnerError> {
        g.sort_by(|a, b| self.ord.cmp(&a.lm(), &b.lm()));
        let mut minimal: Vec<Poly> = Vec::new();
        for p in g {
            if !minimal.iter().any(|q| q.lm().divides(&p.lm())) {
                minimal.retain(|q| !p.lm().divides(&q.lm()));
                minimal.push(p);
            }
        }
        let n = minimal.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let others: Vec<Poly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            let act = vec![true; others.len()];
            let head = Poly { t: vec![minimal[i].t[0].clone()] };
            let tail = Poly { t: minimal[i].t[1..].to_vec() };
            let (r, k) = self.reduce(&tail, &others, &act)?;
            let mut t = vec![(head.t[0].0, &head.t[0].1 * &k)];
            t.extend(r.t);
            let mut p = Poly { t };
            p.make_primitive();
            out.push(p);
        }
        out.sort_by(|a, b| self.ord.cmp(&b.lm(), &a.lm()));
        Ok(out)
    }
}

fn to_internal(p: &MultiPoly, ord: &Ord_) -> Result<Poly, GroebnerError> {
    if p.nvars() > MAXV {
        return Err(GroebnerError::Unsupported(format!("at most {MAXV} variables")));
    }
    let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut t = Vec::with_capacity(p.nterms());
    for (m, c) in p.terms() {
        let mut e = [0u8; MAXV];
        let mut deg = 0u16;
        for (i, &x) in m.0.iter().enumerate() {
            if !(0..=255).contains(&x) {
                return Err(GroebnerError::Unsupported("negative or oversized exponent".into()));
            }
            e[i] = x as u8;
            deg += x as u16;
        }
        t.push((Mon { deg, e }, c.numer() * (&den / c.denom())));
    }
    t.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    let mut p = Poly { t };
    p.make_primitive();
    Ok(p)
}

fn to_multipoly(p: &Poly, n: usize, monic: bool) -> MultiPoly {
    let lc = if monic && !p.is_zero() { p.lc().clone() } else { BigInt::one() };
    MultiPoly::from_terms(n, p.t.iter().map(|(m, c)| (m.e[..n].iter().map(|&x| x as i32).collect(), Rational::new(c.clone(), lc.clone()))))
}

/// Reduced Gröbner basis together with the data needed for normal forms.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: TermOrder,
    nvars: usize,
    polys: Vec<Poly>,
    pub pairs_processed: u64,
}

impl GroebnerBasis {
    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Monic generators, largest leading monomial first.
    pub fn generators(&self) -> Vec<MultiPoly> {
        self.polys.iter().map(|p| to_multipoly(p, self.nvars, true)).collect()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// True iff the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|p| p.lm().deg == 0)
    }

    /// Leading monomial exponents of each generator.
    pub fn leading_monomials(&self) -> Vec<Vec<i32>> {
        self.polys.iter().map(|p| p.lm().e[..self.nvars].iter().map(|&x| x as i32).collect()).collect()
    }

    fn ord(&self) -> Ord_ {
        Ord_ { kind: self.order, n: self.nvars }
    }

    /// Remainder modulo the reduced basis; zero iff `p` lies in the ideal.
    pub fn normal_form(&self, p: &MultiPoly) -> Result<MultiPoly, GroebnerError> {
        let ord = self.ord();
        if p.is_zero() {
            return Ok(p.clone());
        }
        let scale = p.terms().next_back().map(|(_, c)| c.clone()).unwrap();
        let q = to_internal(&p.scale(&scale.recip()), &ord)?;
        // to_internal made q primitive; recover the rational factor exactly.
        let qq = to_multipoly(&q, self.nvars, false);
        let (m0, c0) = qq.terms().next_back().map(|(m, c)| (m.0.clone(), c.clone())).unwrap();
        let factor = p.coeff(&m0) / c0;
        let eng = Engine { ord, budget: Budget::default(), start: Instant::now(), pairs_done: 0 };
        let act = vec![true; self.polys.len()];
        let (r, k) = eng.reduce(&q, &self.polys, &act)?;
        Ok(to_multipoly(&r, self.nvars, false).scale(&(factor / Rational::from_integer(k))))
    }

    pub fn contains(&self, p: &MultiPoly) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(p)?.is_zero())
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(gens: &[MultiPoly], order: TermOrder, budget: &Budget) -> Result<GroebnerBasis, GroebnerError> {
    let n = gens.first().map_or(0, |g| g.nvars());
    if gens.iter().any(|g| g.nvars() != n) {
        return Err(GroebnerError::Unsupported("generators live in different rings".into()));
    }
    if let TermOrder::Elim(k) = order {
        if k > n {
            return Err(GroebnerError::Unsupported("elimination block larger than ring".into()));
        }
    }
    let ord = Ord_ { kind: order, n };
    let input: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).map(|g| to_internal(g, &ord)).collect::<Result<_, _>>()?;
    let mut eng = Engine { ord, budget: *budget, start: Instant::now(), pairs_done: 0 };
    let polys = eng.buchberger(input)?;
    Ok(GroebnerBasis { order, nvars: n, polys, pairs_processed: eng.pairs_done })
}

/// Generators of `I ∩ Q[keep]`, returned in the original ring.
pub fn eliminate(gens: &[MultiPoly], keep: &[usize], budget: &Budget) -> Result<Vec<MultiPoly>, GroebnerError> {
    let n = gens.first().map_or(0, |g| g.nvars());
    let elim: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    // Permute so eliminated variables come first.
    let order: Vec<usize> = elim.iter().chain(keep.iter()).copied().collect();
    let mut to_new = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        to_new[old] = new;
    }
    let perm: Vec<MultiPoly> = gens.iter().map(|g| g.embed(n, &to_new)).collect();
    let gb = groebner_basis(&perm, TermOrder::Elim(elim.len()), budget)?;
    let k = elim.len();
    Ok(gb
        .polys
        .iter()
        .filter(|p| p.t.iter().all(|(m, _)| m.e[..k].iter().all(|&x| x == 0)))
        .map(|p| to_multipoly(p, n, true).embed(n, &order))
        .collect())
}

/// Generators of `I : f^∞`, computed by eliminating `y` from `I + (1 - y f)`.
pub fn saturate(gens: &[MultiPoly], f: &MultiPoly, budget: &Budget) -> Result<Vec<MultiPoly>, GroebnerError> {
    let n = f.nvars();
    // y becomes variable 0 of the extended ring.
    let shift: Vec<usize> = (1..=n).collect();
    let y = MultiPoly::var(n + 1, 0);
    let mut ext: Vec<MultiPoly> = gens.iter().map(|g| g.embed(n + 1, &shift)).collect();
    ext.push(MultiPoly::one(n + 1).sub(&y.mul(&f.embed(n + 1, &shift))));
    let gb = groebner_basis(&ext, TermOrder::Elim(1), budget)?;
    Ok(gb
        .polys
        .iter()
        .filter(|p| p.t.iter().all(|(m, _)| m.e[0] == 0))
        .map(|p| {
            // The y exponent is zero; drop its slot.
            let q = to_multipoly(p, n + 1, true);
            MultiPoly::from_terms(n, q.terms().map(|(m, c)| (m.0[1..].to_vec(), c.clone())))
        })
        .collect())
}

/// Successive saturation by each polynomial in turn.
pub fn saturate_all(gens: &[MultiPoly], fs: &[MultiPoly], budget: &Budget) -> Result<Vec<MultiPoly>, GroebnerError> {
    let mut cur = gens.to_vec();
    for f in fs {
        cur = saturate(&cur, f, budget)?;
        if cur.iter().any(|g| g.constant_value().map_or(false, |c| !c.is_zero())) {
            break;
        }
    }
    Ok(cur)
}

/// Saturates by the product of all variables, which decides questions in the
/// Laurent ring.
pub fn saturate_torus(gens: &[MultiPoly], budget: &Budget) -> Result<Vec<MultiPoly>, GroebnerError> {
    let n = gens.first().map_or(0, |g| g.nvars());
    let prod = MultiPoly::monomial(n, vec![1; n], Rational::one());
    let cleared: Vec<MultiPoly> = gens.iter().map(|g| g.clear_denominators_monomial()).collect();
    saturate(&cleared, &prod, budget)
}

/// True iff the ideal has no zeros on the torus. Cheaper than
/// [`saturate_torus`] since no elimination order is needed.
pub fn torus_trivial(gens: &[MultiPoly], budget: &Budget) -> Result<bool, GroebnerError> {
    let n = gens.first().map_or(0, |g| g.nvars());
    let shift: Vec<usize> = (1..=n).collect();
    let e = vec![1; n + 1];
    let mut ext: Vec<MultiPoly> = gens.iter().map(|g| g.clear_denominators_monomial().embed(n + 1, &shift)).collect();
    ext.push(MultiPoly::monomial(n + 1, e, Rational::one()).sub(&MultiPoly::one(n + 1)));
    is_trivial(&ext, budget)
}

/// True iff the generated ideal is the unit ideal.
pub fn is_trivial(gens: &[MultiPoly], budget: &Budget) -> Result<bool, GroebnerError> {
    if gens.iter().any(|g| g.constant_value().map_or(false, |c| !c.is_zero())) {
        return Ok(true);
    }
    let nz: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nz.is_empty() {
        return Ok(false);
    }
    Ok(groebner_basis(&nz, TermOrder::Grevlex, budget)?.is_unit())
}

/// Intersection of two ideals via `t I + (1 - t) J` and elimination of `t`.
pub fn intersect(a: &[MultiPoly], b: &[MultiPoly], budget: &Budget) -> Result<Vec<MultiPoly>, GroebnerError> {
    let n = a.first().or(b.first()).map_or(0, |g| g.nvars());
    let shift: Vec<usize> = (1..=n).collect();
    let t = MultiPoly::var(n + 1, 0);
    let one_t = MultiPoly::one(n + 1).sub(&t);
    let mut ext: Vec<MultiPoly> = a.iter().map(|g| t.mul(&g.embed(n + 1, &shift))).collect();
    ext.extend(b.iter().map(|g| one_t.mul(&g.embed(n + 1, &shift))));
    let gb = groebner_basis(&ext, TermOrder::Elim(1), budget)?;
    Ok(gb
        .polys
        .iter()
        .filter(|p| p.t.iter().all(|(m, _)| m.e[0] == 0))
        .map(|p| {
            let q = to_multipoly(p, n + 1, true);
            MultiPoly::from_terms(n, q.terms().map(|(m, c)| (m.0[1..].to_vec(), c.clone())))
        })
        .collect())
}

/// `I : J^∞` for an ideal `J`, as the intersection of the saturations by its
/// generators.
pub fn saturate_ideal(gens: &[MultiPoly], j: &[MultiPoly], budget: &Budget) -> Result<Vec<MultiPoly>, GroebnerError> {
    let mut acc: Option<Vec<MultiPoly>> = None;
    for f in j {
        let s = saturate(gens, f, budget)?;
        acc = Some(match acc {
            None => s,
            Some(prev) => intersect(&prev, &s, budget)?,
        });
    }
    Ok(acc.unwrap_or_else(|| gens.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use proptest::prelude::*;

    fn ps(v: &[&str], vars: &[&str]) -> Vec<MultiPoly> {
        v.iter().map(|s| MultiPoly::parse(s, vars, false).unwrap()).collect()
    }

    const XY: [&str; 2] = ["x", "y"];

    #[test]
    fn basic_bases() {
        let b = Budget::default();
        let gb = groebner_basis(&ps(&["x^2 - 1", "x - 1"], &XY), TermOrder::Grevlex, &b).unwrap();
        assert_eq!(gb.generators(), ps(&["x - 1"], &XY));
        let gb = groebner_basis(&ps(&["x", "x + 1"], &XY), TermOrder::Grevlex, &b).unwrap();
        assert!(gb.is_unit());
    }

    #[test]
    fn elimination_example() {
        let g = ps(&["x - y^2", "y - 2"], &XY);
        let e = eliminate(&g, &[0], &Budget::default()).unwrap();
        assert_eq!(e, ps(&["x - 4"], &XY));
    }

    #[test]
    fn saturation_examples() {
        let b = Budget::default();
        let s = saturate(&ps(&["x*y"], &XY), &ps(&["y"], &XY)[0], &b).unwrap();
        assert_eq!(s, ps(&["x"], &XY));
        let s = saturate(&ps(&["x"], &XY), &ps(&["x"], &XY)[0], &b).unwrap();
        assert!(is_trivial(&s, &b).unwrap());
        // x^2, xy = x (x, y): saturating by x removes everything.
        let s = saturate(&ps(&["x^2", "x*y"], &XY), &ps(&["x"], &XY)[0], &b).unwrap();
        assert!(is_trivial(&s, &b).unwrap());
        // Saturating by y instead leaves (x).
        let s = saturate(&ps(&["x^2", "x*y"], &XY), &ps(&["y"], &XY)[0], &b).unwrap();
        assert_eq!(s, ps(&["x"], &XY));
    }

    #[test]
    fn cyclic_three_lex() {
        let v = ["a", "b", "c"];
        let g = ps(&["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"], &v);
        let gb = groebner_basis(&g, TermOrder::Lex, &Budget::default()).unwrap();
        assert_eq!(gb.generators(), ps(&["a + b + c", "b^2 + b*c + c^2", "c^3 - 1"], &v));
    }

    #[test]
    fn budget_is_enforced() {
        let v = ["a", "b", "c", "d"];
        let g = ps(&["a + b + c + d", "a*b + b*c + c*d + d*a", "a*b*c + b*c*d + c*d*a + d*a*b", "a*b*c*d - 1"], &v);
        let tight = Budget { max_pairs: 2, ..Budget::default() };
        assert!(matches!(groebner_basis(&g, TermOrder::Grevlex, &tight), Err(GroebnerError::ResourceExhausted(_))));
        let gb = groebner_basis(&g, TermOrder::Grevlex, &Budget::default()).unwrap();
        for f in &g {
            assert!(gb.contains(f).unwrap());
        }
    }

    #[test]
    fn normal_form_values() {
        let gb = groebner_basis(&ps(&["x^2 - 2"], &XY), TermOrder::Grevlex, &Budget::default()).unwrap();
        let nf = gb.normal_form(&MultiPoly::parse("3/2*x^3 + y", &XY, false).unwrap()).unwrap();
        assert_eq!(nf, MultiPoly::parse("3*x + y", &XY, false).unwrap());
        assert_eq!(gb.normal_form(&MultiPoly::constant(2, int(5))).unwrap(), MultiPoly::constant(2, int(5)));
    }

    #[test]
    fn intersection_of_principal_ideals() {
        let b = Budget::default();
        let i = intersect(&ps(&["x"], &XY), &ps(&["y"], &XY), &b).unwrap();
        assert_eq!(i, ps(&["x*y"], &XY));
    }

    fn arb_small(n: usize) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((prop::collection::vec(0..3i32, n), -3i64..4), 1..4)
            .prop_map(move |ts| MultiPoly::from_terms(n, ts.into_iter().map(|(e, c)| (e, int(c)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn generators_reduce_to_zero_and_basis_is_order_stable(
            gens in prop::collection::vec(arb_small(3), 1..4)
        ) {
            let b = Budget { max_millis: Some(5_000), ..Budget::default() };
            if let Ok(gb) = groebner_basis(&gens, TermOrder::Grevlex, &b) {
                for g in &gens {
                    prop_assert!(gb.contains(g).unwrap());
                }
                // Basis elements pairwise have reduced leading terms.
                let lms = gb.leading_monomials();
                for (i, a) in lms.iter().enumerate() {
                    for (j, c) in lms.iter().enumerate() {
                        if i != j {
                            prop_assert!(!a.iter().zip(c).all(|(x, y)| x <= y));
                        }
                    }
                }
                let mut rev = gens.clone();
                rev.reverse();
                let gb2 = groebner_basis(&rev, TermOrder::Grevlex, &b).unwrap();
                prop_assert_eq!(gb.generators(), gb2.generators());
            }
        }
    }
}
