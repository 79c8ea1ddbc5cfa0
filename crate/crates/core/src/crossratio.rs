//! Cross-ratios of marked points on the projective line, residues of forms
//! with simple poles, and the polynomial conditions satisfied by stable
//! limits of eigenforms.
//!
//! Points are homogeneous pairs `[x : w]`, so the cross-ratio is a ratio of
//! 2x2 determinants and infinity needs no special case.

use crate::exactnum::{FieldElement, NumberField, QMatrix, Rational, Scalar};
use crate::multipoly::MultiPoly;
use crate::report::Grade;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrossRatioError {
    #[error("degenerate quadruple: two of the four points coincide")]
    DegenerateQuadruple,
    #[error("marked points {0} and {1} coincide")]
    CoincidentMarkings(String, String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported normalization: {0}")]
    UnsupportedNormalization(String),
    #[error("the triple is not a basis of the field")]
    DependentBasis,
    #[error("cross-ratio exponents must not all vanish")]
    ZeroExponents,
    #[error("outside the cross-ratio domain: {0}")]
    DomainViolation(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
}

/// Point `[x : w]` of the projective line; `w = 0` is infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint<S> {
    pub x: S,
    pub w: S,
}

impl<S: Scalar> ProjPoint<S> {
    pub fn new(x: S, w: S) -> Result<Self, CrossRatioError> {
        if x.is_zero_elem() && w.is_zero_elem() {
            return Err(CrossRatioError::InvalidConfig("point [0 : 0]".into()));
        }
        Ok(ProjPoint { x, w })
    }

    pub fn finite(a: S) -> Self {
        let w = a.one_like();
        ProjPoint { x: a, w }
    }

    /// The point at infinity, in the field of `like`.
    pub fn infinity(like: &S) -> Self {
        ProjPoint { x: like.one_like(), w: like.zero_like() }
    }

    pub fn is_infinity(&self) -> bool {
        self.w.is_zero_elem()
    }

    pub fn affine(&self) -> Option<S> {
        self.x.div(&self.w)
    }

    pub fn same(&self, o: &Self) -> bool {
        det(self, o).is_zero_elem()
    }
}

fn det<S: Scalar>(a: &ProjPoint<S>, b: &ProjPoint<S>) -> S {
    a.x.mul(&b.w).sub(&b.x.mul(&a.w))
}

/// `[z1, z2, z3, z4] = (z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3))`.
pub fn cross_ratio<S: Scalar>(z1: &ProjPoint<S>, z2: &ProjPoint<S>, z3: &ProjPoint<S>, z4: &ProjPoint<S>) -> Result<S, CrossRatioError> {
    let z = [z1, z2, z3, z4];
    for a in 0..4 {
        for b in a + 1..4 {
            if z[a].same(z[b]) {
                return Err(CrossRatioError::DegenerateQuadruple);
            }
        }
    }
    det(z1, z3).mul(&det(z2, z4)).div(&det(z1, z4).mul(&det(z2, z3))).ok_or(CrossRatioError::DegenerateQuadruple)
}

/// Cross-ratio of four finite points.
pub fn cross_ratio_affine<S: Scalar>(a: &S, b: &S, c: &S, d: &S) -> Result<S, CrossRatioError> {
    cross_ratio(&ProjPoint::finite(a.clone()), &ProjPoint::finite(b.clone()), &ProjPoint::finite(c.clone()), &ProjPoint::finite(d.clone()))
}

/// A form `C prod (z - z_i)^{m_i} dz / prod (z - x_j)` on the projective line
/// together with a partition of its poles.
#[derive(Clone, Debug, PartialEq)]
pub struct StableFormConfig<S> {
    pub zeros: Vec<(ProjPoint<S>, u32)>,
    pub poles: Vec<ProjPoint<S>>,
    /// Parts of the pole partition; empty means a single part.
    pub parts: Vec<Vec<usize>>,
}

impl<S: Scalar> StableFormConfig<S> {
    /// The type `(n; m_1, ..., m_k)`.
    pub fn signature(&self) -> (usize, Vec<u32>) {
        (self.poles.len(), self.zeros.iter().map(|z| z.1).collect())
    }

    pub fn effective_parts(&self) -> Vec<Vec<usize>> {
        if self.parts.is_empty() {
            vec![(0..self.poles.len()).collect()]
        } else {
            self.parts.clone()
        }
    }

    pub fn validate(&self) -> Result<(), CrossRatioError> {
        let n = self.poles.len();
        let deg: u32 = self.zeros.iter().map(|z| z.1).sum();
        if n < 2 || deg as usize + 2 != n {
            return Err(CrossRatioError::InvalidConfig(format!("zero orders sum to {deg} but there are {n} poles")));
        }
        let mut seen = vec![false; n];
        for part in self.effective_parts() {
            if part.len() < 2 {
                return Err(CrossRatioError::InvalidConfig(format!("singleton part {part:?}")));
            }
            for &i in &part {
                if i >= n || seen[i] {
                    return Err(CrossRatioError::InvalidConfig(format!("pole index {i} missing or repeated in the partition")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(CrossRatioError::InvalidConfig("partition does not cover every pole".into()));
        }
        let marks: Vec<(String, &ProjPoint<S>)> = self
            .zeros
            .iter()
            .enumerate()
            .map(|(i, z)| (format!("zero {}", i + 1), &z.0))
            .chain(self.poles.iter().enumerate().map(|(i, p)| (format!("pole {}", i + 1), p)))
            .collect();
        for a in 0..marks.len() {
            for b in a + 1..marks.len() {
                if marks[a].1.same(marks[b].1) {
                    return Err(CrossRatioError::CoincidentMarkings(marks[a].0.clone(), marks[b].0.clone()));
                }
            }
        }
        Ok(())
    }
}

/// Residues of the form with `C = 1`, one per pole. A pole at infinity gets
/// minus the sum of the finite residues.
pub fn residues_raw<S: Scalar>(cfg: &StableFormConfig<S>) -> Result<Vec<S>, CrossRatioError> {
    cfg.validate()?;
    let like = cfg.poles[0].x.clone();
    let finite: Vec<Option<S>> = cfg.poles.iter().map(|p| p.affine()).collect();
    let zeros: Vec<(S, u32)> = cfg.zeros.iter().filter_map(|(z, m)| z.affine().map(|a| (a, *m))).collect();
    let mut out: Vec<Option<S>> = Vec::with_capacity(finite.len());
    for (j, pj) in finite.iter().enumerate() {
        let Some(pj) = pj else {
            out.push(None);
            continue;
        };
        let mut num = like.one_like();
        for (z, m) in &zeros {
            num = num.mul(&pj.sub(z).pow(*m as i64).unwrap());
        }
        let mut den = like.one_like();
        for (k, pk) in finite.iter().enumerate() {
            if let (true, Some(pk)) = (k != j, pk) {
                den = den.mul(&pj.sub(pk));
            }
        }
        out.push(Some(num.div(&den).ok_or(CrossRatioError::CoincidentMarkings(format!("pole {}", j + 1), "another pole".into()))?));
    }
    let sum = out.iter().flatten().fold(like.zero_like(), |a, r| a.add(r));
    Ok(out.into_iter().map(|r| r.unwrap_or_else(|| sum.neg())).collect())
}

/// Residues normalized so that the first one is 1.
pub fn residues<S: Scalar>(cfg: &StableFormConfig<S>) -> Result<Vec<S>, CrossRatioError> {
    let raw = residues_raw(cfg)?;
    let r0 = raw[0].clone();
    raw.iter().map(|r| r.div(&r0).ok_or(CrossRatioError::CoincidentMarkings("zero".into(), "pole 1".into()))).collect()
}

/// Exact or numeric decision whether a value is a root of unity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitVerdict {
    pub root_of_unity: bool,
    pub order: Option<u64>,
    pub grade: Grade,
}

pub trait RootOfUnityTest {
    fn root_of_unity(&self) -> UnitVerdict;
}

fn rational_unit(r: &Rational) -> UnitVerdict {
    let order = if r.is_one() {
        Some(1)
    } else if (-r).is_one() {
        Some(2)
    } else {
        None
    };
    UnitVerdict { root_of_unity: order.is_some(), order, grade: Grade::Exact }
}

impl RootOfUnityTest for Rational {
    fn root_of_unity(&self) -> UnitVerdict {
        rational_unit(self)
    }
}

impl RootOfUnityTest for FieldElement {
    /// A root of unity of order `k` in a field of degree `d` has
    /// `phi(k) <= d`, hence `k <= 2 d^2`; checking powers up to that bound
    /// is an exact decision.
    fn root_of_unity(&self) -> UnitVerdict {
        if let Some(r) = self.as_rational() {
            return rational_unit(&r);
        }
        let d = self.modulus().degree() as u64;
        let mut p = self.clone();
        for k in 1..=2 * d * d {
            if p.is_one_elem() {
                return UnitVerdict { root_of_unity: true, order: Some(k), grade: Grade::Exact };
            }
            p = p.mul(self);
        }
        UnitVerdict { root_of_unity: false, order: None, grade: Grade::Exact }
    }
}

/// Tolerance of the numeric unit-circle test.
pub const UNIT_CIRCLE_TOL: f64 = 1e-10;

impl RootOfUnityTest for num_complex::Complex64 {
    fn root_of_unity(&self) -> UnitVerdict {
        let on = (self.norm() - 1.0).abs() <= UNIT_CIRCLE_TOL;
        UnitVerdict { root_of_unity: on, order: None, grade: Grade::Numeric }
    }
}

/// Rational coordinates of a scalar over Q.
pub trait QCoords {
    fn q_coords(&self) -> Vec<Rational>;
}

impl QCoords for Rational {
    fn q_coords(&self) -> Vec<Rational> {
        vec![self.clone()]
    }
}

impl QCoords for FieldElement {
    fn q_coords(&self) -> Vec<Rational> {
        self.coords()
    }
}

/// Primitive integer vector proportional to a rational one, first nonzero
/// entry positive.
pub fn primitive_integer(v: &[Rational]) -> Option<Vec<i64>> {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return None;
    }
    let sign = if ints.iter().find(|c| !c.is_zero())?.is_negative() { -g } else { g };
    ints.iter().map(|c| (c / &sign).to_i64()).collect()
}

/// Cross-ratio exponents of a basis `(r_1, r_2, r_3)` of a cubic field:
/// the primitive integer `b` with `sum b_i s_{i+1} s_{i+2} = 0` for the
/// trace-dual basis `s`, first entry positive. `None` if only `b = 0`
/// solves the system.
pub fn cre_exponents(field: &NumberField, triple: &[FieldElement; 3]) -> Result<Option<Vec<i64>>, CrossRatioError> {
    if field.degree() != 3 {
        return Err(CrossRatioError::UnsupportedNormalization("cross-ratio exponents need a cubic field".into()));
    }
    let s = field.trace_dual_basis(triple).map_err(|_| CrossRatioError::DependentBasis)?;
    let prods: Vec<Vec<Rational>> = (0..3).map(|i| s[(i + 1) % 3].mul(&s[(i + 2) % 3]).coords()).collect();
    let a = QMatrix::from_rows((0..3).map(|k| (0..3).map(|i| prods[i][k].clone()).collect()).collect());
    Ok(a.nullspace().first().and_then(|v| primitive_integer(v)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CreCheck<S> {
    /// `(R_1, R_2, R_3)` with `R_k = [x_i, y_i, x_j, y_j]`, `{i, j, k} = {1, 2, 3}`.
    pub cross_ratios: [S; 3],
    pub value: S,
    pub verdict: UnitVerdict,
}

/// Evaluates `R_1^{a_1} R_2^{a_2} R_3^{a_3}` for three pole pairs.
pub fn check_cre<S: Scalar + RootOfUnityTest>(pairs: &[(S, S); 3], a: &[i64; 3]) -> Result<CreCheck<S>, CrossRatioError> {
    if a.iter().all(|&x| x == 0) {
        return Err(CrossRatioError::ZeroExponents);
    }
    let r = |k: usize| {
        let (p, q) = (&pairs[(k + 1) % 3], &pairs[(k + 2) % 3]);
        cross_ratio_affine(&p.0, &p.1, &q.0, &q.1)
    };
    let cross_ratios = [r(0)?, r(1)?, r(2)?];
    let mut value = cross_ratios[0].one_like();
    for k in 0..3 {
        value = value.mul(&cross_ratios[k].pow(a[k]).ok_or(CrossRatioError::DegenerateQuadruple)?);
    }
    let verdict = value.root_of_unity();
    Ok(CreCheck { cross_ratios, value, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorsionCondition {
    /// i) residues within each part sum to zero.
    PartResidueSum,
    /// ii) residues span a space of dimension `n - |J|` over Q.
    ResidueSpan,
    /// iii) cross-ratios of zeros against poles within a part are roots of
    /// unity of order dividing `N`.
    CrossRatioTorsion,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum TorsionVerdict {
    Satisfies { grade: Grade },
    Violates { condition: TorsionCondition, detail: String },
}

/// Checks the conditions for a form to be determined by torsion of order
/// dividing `n_order`.
pub fn torsion_config_check<S: Scalar + QCoords>(cfg: &StableFormConfig<S>, n_order: u64) -> Result<TorsionVerdict, CrossRatioError> {
    let r = residues(cfg)?;
    let parts = cfg.effective_parts();
    for (pi, part) in parts.iter().enumerate() {
        let s = part.iter().fold(r[0].zero_like(), |a, &j| a.add(&r[j]));
        if !s.is_zero_elem() {
            return Ok(TorsionVerdict::Violates { condition: TorsionCondition::PartResidueSum, detail: format!("part {} has nonzero residue sum", pi + 1) });
        }
    }
    let rank = QMatrix::from_rows(r.iter().map(|x| x.q_coords()).collect()).rank();
    let want = cfg.poles.len() - parts.len();
    if rank != want {
        return Ok(TorsionVerdict::Violates { condition: TorsionCondition::ResidueSpan, detail: format!("residues span dimension {rank}, expected {want}") });
    }
    for a in 0..cfg.zeros.len() {
        for b in a + 1..cfg.zeros.len() {
            for part in &parts {
                for (u, &i1) in part.iter().enumerate() {
                    for &i2 in &part[u + 1..] {
                        let c = cross_ratio(&cfg.zeros[a].0, &cfg.zeros[b].0, &cfg.poles[i1], &cfg.poles[i2])?;
                        if !c.pow(n_order as i64).is_some_and(|p| p.is_one_elem()) {
                            return Ok(TorsionVerdict::Violates {
                                condition: TorsionCondition::CrossRatioTorsion,
                                detail: format!("[z{}, z{}, x{}, x{}] is not an N-th root of unity", a + 1, b + 1, i1 + 1, i2 + 1),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(TorsionVerdict::Satisfies { grade: Grade::Exact })
}

// ---------------------------------------------------------------------------
// Symbolic conditions.

/// A marking whose coordinate is a polynomial in the declared variables.
#[derive(Clone, Debug, PartialEq)]
pub enum SymPoint {
    Finite(MultiPoly),
    Infinity,
}

/// A form with symbolic markings. Poles are finite; zeros may sit at
/// infinity. `residues`, when present, describes the form as
/// `sum r_j / (z - x_j) dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicConfig {
    pub vars: Vec<String>,
    pub zeros: Vec<(SymPoint, u32)>,
    pub poles: Vec<MultiPoly>,
    pub residues: Option<Vec<MultiPoly>>,
    pub parts: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionKind {
    ZeroOrder,
    OppositeResidue,
    PartitionResidueSum,
}

fn vars_of(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

impl SymbolicConfig {
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    fn var(&self, i: usize) -> MultiPoly {
        MultiPoly::var(self.nvars(), i)
    }

    fn cst(&self, c: i64) -> MultiPoly {
        MultiPoly::constant(self.nvars(), Rational::from_integer(c.into()))
    }

    /// Hyperelliptic `(4)`: zero of order 4 at 0, poles `+-x_i`, residues
    /// `+-r_i`. Variables `x1, x2, x3, r1, r2, r3`.
    pub fn hyp4() -> Self {
        let mut c = SymbolicConfig { vars: vars_of(&["x1", "x2", "x3", "r1", "r2", "r3"]), zeros: vec![], poles: vec![], residues: None, parts: vec![] };
        c.zeros = vec![(SymPoint::Finite(c.cst(0)), 4)];
        c.poles = (0..3).flat_map(|i| [c.var(i), c.var(i).neg()]).collect();
        c.residues = Some((0..3).flat_map(|i| [c.var(3 + i), c.var(3 + i).neg()]).collect());
        c.parts = (0..3).map(|i| vec![2 * i, 2 * i + 1]).collect();
        c
    }

    /// Odd `(4)`: zero of order 4 at infinity, pole pairs `(x_1, y_1)`,
    /// `(x_2, y_2)`, `(1, -1)`. Variables `x1, y1, x2, y2`.
    pub fn odd4() -> Self {
        let mut c = SymbolicConfig { vars: vars_of(&["x1", "y1", "x2", "y2"]), zeros: vec![(SymPoint::Infinity, 4)], poles: vec![], residues: None, parts: vec![] };
        c.poles = vec![c.var(0), c.var(1), c.var(2), c.var(3), c.cst(1), c.cst(-1)];
        c.parts = (0..3).map(|i| vec![2 * i, 2 * i + 1]).collect();
        c
    }

    /// `S(2,2)`: double zeros at 0 and infinity, poles `x_i` and
    /// `y_i = zeta_i x_i`. Variables `x1, x2, x3, zeta1, zeta2, zeta3`.
    pub fn s22() -> Self {
        let mut c = SymbolicConfig {
            vars: vars_of(&["x1", "x2", "x3", "zeta1", "zeta2", "zeta3"]),
            zeros: vec![],
            poles: vec![],
            residues: None,
            parts: vec![],
        };
        c.zeros = vec![(SymPoint::Finite(c.cst(0)), 2), (SymPoint::Infinity, 2)];
        c.poles = (0..3).flat_map(|i| [c.var(i), c.var(3 + i).mul(&c.var(i))]).collect();
        c.parts = (0..3).map(|i| vec![2 * i, 2 * i + 1]).collect();
        c
    }

    /// Type `(5; 2, 1)` with two parts: double zero at 0, simple zero at
    /// infinity, poles `u_1 = 1, u_2, u_3, x_1, zeta x_1`; the enforced part
    /// is `{x_1, zeta x_1}`. Variables `x1, zeta, u2, u3`.
    pub fn residue21() -> Self {
        let mut c = SymbolicConfig { vars: vars_of(&["x1", "zeta", "u2", "u3"]), zeros: vec![(SymPoint::Infinity, 1)], poles: vec![], residues: None, parts: vec![vec![3, 4]] };
        c.zeros.insert(0, (SymPoint::Finite(c.cst(0)), 2));
        c.poles = vec![c.cst(1), c.var(2), c.var(3), c.var(0), c.var(1).mul(&c.var(0))];
        c
    }

    /// Type `(4; 1, 1)` with one part: simple zeros at 0 and infinity, poles
    /// `1, zeta_2, zeta_3, zeta_4`, residues `r_1, r_2, r_3` and
    /// `r_4 = -(r_1 + r_2 + r_3)`. Variables `zeta2, zeta3, zeta4, r1, r2, r3`.
    pub fn one_part_1111() -> Self {
        let mut c = SymbolicConfig {
            vars: vars_of(&["zeta2", "zeta3", "zeta4", "r1", "r2", "r3"]),
            zeros: vec![(SymPoint::Infinity, 1)],
            poles: vec![],
            residues: None,
            parts: vec![],
        };
        c.zeros.insert(0, (SymPoint::Finite(c.cst(0)), 1));
        c.poles = vec![c.cst(1), c.var(0), c.var(1), c.var(2)];
        let r4 = c.var(3).add(&c.var(4)).add(&c.var(5)).neg();
        c.residues = Some(vec![c.var(3), c.var(4), c.var(5), r4]);
        c.parts = vec![vec![0, 1, 2, 3]];
        c
    }
}

/// Polynomial in `z` with polynomial coefficients, lowest degree first.
type ZPoly = Vec<MultiPoly>;

fn zmul(a: &ZPoly, b: &ZPoly, n: usize) -> ZPoly {
    let mut out = vec![MultiPoly::zero(n); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn zlinear(p: &MultiPoly) -> ZPoly {
    vec![p.neg(), MultiPoly::one(p.nvars())]
}

fn zeval(a: &ZPoly, x: &MultiPoly) -> MultiPoly {
    a.iter().rev().fold(MultiPoly::zero(x.nvars()), |acc, c| acc.mul(x).add(c))
}

/// Coefficients of `a(z0 + w)` in `w`.
fn zshift(a: &ZPoly, z0: &MultiPoly) -> ZPoly {
    let n = z0.nvars();
    let lin = vec![z0.clone(), MultiPoly::one(n)];
    a.iter().rev().fold(vec![MultiPoly::zero(n)], |acc, c| {
        let mut r = zmul(&acc, &lin, n);
        r[0] = r[0].add(c);
        r
    })
}

/// Removes monomial factors and content; `None` for the zero polynomial.
pub fn canonical(p: &MultiPoly) -> Option<MultiPoly> {
    if p.is_zero() {
        return None;
    }
    Some(p.strip_monomial_factor().set_laurent(false).primitive())
}

fn push_unique(out: &mut Vec<MultiPoly>, p: &MultiPoly) {
    if let Some(q) = canonical(p) {
        if !out.contains(&q) {
            out.push(q);
        }
    }
}

/// Exact polynomial conditions on the declared variables.
///
/// * zero-order: the numerator of `sum r_j / (z - x_j)` vanishes to the
///   prescribed order at each zero (needs `residues`);
/// * partition-residue-sum: the residues in each part sum to zero, cleared
///   of denominators;
/// * opposite-residue: the same for parts that are pairs.
pub fn stable_form_conditions(kind: ConditionKind, cfg: &SymbolicConfig) -> Result<Vec<MultiPoly>, CrossRatioError> {
    let n = cfg.nvars();
    if cfg.poles.iter().any(|p| p.nvars() != n) {
        return Err(CrossRatioError::UnsupportedNormalization("poles live in a different ring".into()));
    }
    let mut out = Vec::new();
    match kind {
        ConditionKind::ZeroOrder => {
            let r = cfg.residues.as_ref().ok_or_else(|| CrossRatioError::UnsupportedNormalization("zero-order conditions need symbolic residues".into()))?;
            if r.len() != cfg.poles.len() {
                return Err(CrossRatioError::UnsupportedNormalization("one residue per pole".into()));
            }
            let np = cfg.poles.len();
            let mut num: ZPoly = vec![MultiPoly::zero(n); np];
            for (j, rj) in r.iter().enumerate() {
                let mut t: ZPoly = vec![rj.clone()];
                for (k, pk) in cfg.poles.iter().enumerate() {
                    if k != j {
                        t = zmul(&t, &zlinear(pk), n);
                    }
                }
                for (i, c) in t.into_iter().enumerate() {
                    num[i] = num[i].add(&c);
                }
            }
            for (z, m) in &cfg.zeros {
                match z {
                    SymPoint::Finite(z0) => {
                        let sh = zshift(&num, z0);
                        for c in sh.iter().take(*m as usize) {
                            push_unique(&mut out, c);
                        }
                    }
                    // Order m at infinity: deg num <= np - 2 - m.
                    SymPoint::Infinity => {
                        for l in 0..=*m as usize {
                            if let Some(c) = (np - 1).checked_sub(l).map(|d| &num[d]) {
                                push_unique(&mut out, c);
                            }
                        }
                    }
                }
            }
        }
        ConditionKind::OppositeResidue | ConditionKind::PartitionResidueSum => {
            if kind == ConditionKind::OppositeResidue && cfg.parts.iter().any(|p| p.len() != 2) {
                return Err(CrossRatioError::UnsupportedNormalization("opposite-residue conditions need pole pairs".into()));
            }
            let mut zn: ZPoly = vec![MultiPoly::one(n)];
            for (z, m) in &cfg.zeros {
                if let SymPoint::Finite(z0) = z {
                    for _ in 0..*m {
                        zn = zmul(&zn, &zlinear(z0), n);
                    }
                }
            }
            for part in &cfg.parts {
                push_unique(&mut out, &part_residue_sum(&zn, &cfg.poles, part));
            }
        }
    }
    Ok(out)
}

/// `V * W * sum_{a in P} Res_{p_a}` for the Vandermonde `V` of the part and
/// `W = prod_{l in P, k not in P} (p_l - p_k)`, which is a polynomial.
fn part_residue_sum(zn: &ZPoly, poles: &[MultiPoly], part: &[usize]) -> MultiPoly {
    let n = poles[0].nvars();
    let outside: Vec<usize> = (0..poles.len()).filter(|k| !part.contains(k)).collect();
    let mut acc = MultiPoly::zero(n);
    for (a, &ja) in part.iter().enumerate() {
        let mut t = zeval(zn, &poles[ja]);
        for (b, &jb) in part.iter().enumerate() {
            if b == a {
                continue;
            }
            for &jc in &part[b + 1..] {
                if jc != ja {
                    t = t.mul(&poles[jb].sub(&poles[jc]));
                }
            }
            for &k in &outside {
                t = t.mul(&poles[jb].sub(&poles[k]));
            }
        }
        acc = if a % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

// ---------------------------------------------------------------------------
// Cross-ratio coordinates on M_{0,n}.

/// Marked points in the standard normalization `z_1 = inf, z_2 = 0,
/// z_3 = 1`: further zeros `z_4, ...` and pole pairs `(x_j, y_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedConfig<S> {
    pub zeros: Vec<S>,
    pub pairs: Vec<(S, S)>,
}

/// `(i, j) -> R_ij = [z_1, z_i, y_j, x_j]`, indices as in the paper.
pub type CrossRatioTuple<S> = BTreeMap<(usize, usize), S>;

impl<S: Scalar> MarkedConfig<S> {
    fn like(&self) -> &S {
        &self.pairs[0].0
    }

    /// `z_i` for `i >= 2`.
    pub fn zero(&self, i: usize) -> S {
        match i {
            2 => self.like().zero_like(),
            3 => self.like().one_like(),
            _ => self.zeros[i - 4].clone(),
        }
    }

    pub fn validate(&self) -> Result<(), CrossRatioError> {
        if self.pairs.is_empty() {
            return Err(CrossRatioError::DomainViolation("no pole pairs".into()));
        }
        let mut pts: Vec<(String, S)> = (2..4 + self.zeros.len()).map(|i| (format!("z{i}"), self.zero(i))).collect();
        for (j, (x, y)) in self.pairs.iter().enumerate() {
            pts.push((format!("x{}", j + 1), x.clone()));
            pts.push((format!("y{}", j + 1), y.clone()));
        }
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                if pts[a].1.sub(&pts[b].1).is_zero_elem() {
                    return Err(CrossRatioError::DomainViolation(format!("{} = {}", pts[a].0, pts[b].0)));
                }
            }
        }
        Ok(())
    }

    fn r(&self, i: usize, j: usize) -> Result<S, CrossRatioError> {
        let (x, y) = &self.pairs[j - 1];
        let z = self.zero(i);
        z.sub(x).div(&z.sub(y)).ok_or_else(|| CrossRatioError::DomainViolation(format!("z{i} = y{j}")))
    }
}

/// All `R_ij`, `2 <= i <= 3 + #zeros`, `1 <= j <= #pairs`.
pub fn cr_coordinates<S: Scalar>(cfg: &MarkedConfig<S>) -> Result<CrossRatioTuple<S>, CrossRatioError> {
    cfg.validate()?;
    let mut out = BTreeMap::new();
    for j in 1..=cfg.pairs.len() {
        for i in 2..4 + cfg.zeros.len() {
            out.insert((i, j), cfg.r(i, j)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Minimal coordinates: `R_2j = x_j / y_j`, `R_3j = (1 - x_j)/(1 - y_j)` for
/// every pair and `R_i1` for every further zero.
pub fn crmin_forward<S: Scalar>(cfg: &MarkedConfig<S>) -> Result<CrossRatioTuple<S>, CrossRatioError> {
    cfg.validate()?;
    let mut out = BTreeMap::new();
    for j in 1..=cfg.pairs.len() {
        out.insert((2, j), cfg.r(2, j)?);
        out.insert((3, j), cfg.r(3, j)?);
    }
    for i in 4..4 + cfg.zeros.len() {
        out.insert((i, 1), cfg.r(i, 1)?);
    }
    Ok(out)
}

/// Reconstructs the marked points: `y = (R_3 - 1)/(R_3 - R_2)`, `x = R_2 y`
/// and `z_i = [1, R_21, R_31, R_i1]`.
pub fn crmin_inverse<S: Scalar>(t: &CrossRatioTuple<S>) -> Result<MarkedConfig<S>, CrossRatioError> {
    let get = |i: usize, j: usize| t.get(&(i, j)).ok_or_else(|| CrossRatioError::DomainViolation(format!("missing R{i}{j}")));
    let npairs = t.keys().filter(|k| k.0 == 2).count();
    let nzeros = t.keys().filter(|k| k.0 >= 4).count();
    let mut pairs = Vec::with_capacity(npairs);
    for j in 1..=npairs {
        let (r2, r3) = (get(2, j)?, get(3, j)?);
        for (name, r) in [("R2", r2), ("R3", r3)] {
            if r.is_zero_elem() || r.is_one_elem() {
                return Err(CrossRatioError::DomainViolation(format!("{name}{j} in {{0, 1}}")));
            }
        }
        let y = r3.sub(&r3.one_like()).div(&r3.sub(r2)).ok_or_else(|| CrossRatioError::DomainViolation(format!("R2{j} = R3{j}")))?;
        pairs.push((r2.mul(&y), y));
    }
    let mut zeros = Vec::with_capacity(nzeros);
    for i in 4..4 + nzeros {
        let (r21, r31, ri1) = (get(2, 1)?, get(3, 1)?, get(i, 1)?);
        let z = cross_ratio_affine(&r21.one_like(), r21, r31, ri1).map_err(|_| CrossRatioError::DomainViolation(format!("R{i}1 collides")))?;
        zeros.push(z);
    }
    let cfg = MarkedConfig { zeros, pairs };
    cfg.validate()?;
    Ok(cfg)
}

/// Either direction of the minimal cross-ratio transform.
pub enum CrminData<S> {
    Config(MarkedConfig<S>),
    Tuple(CrossRatioTuple<S>),
}

pub fn crmin_transform<S: Scalar>(direction: Direction, data: CrminData<S>) -> Result<CrminData<S>, CrossRatioError> {
    match (direction, data) {
        (Direction::Forward, CrminData::Config(c)) => crmin_forward(&c).map(CrminData::Tuple),
        (Direction::Inverse, CrminData::Tuple(t)) => crmin_inverse(&t).map(CrminData::Config),
        _ => Err(CrossRatioError::DomainViolation("data does not match the direction".into())),
    }
}

/// Variables `t_ij` of the ten-point system, in the order
/// `t21, t31, t41, t22, t32, t42, t23, t33, t43`.
pub const M010_VARS: [&str; 9] = ["t21", "t31", "t41", "t22", "t32", "t42", "t23", "t33", "t43"];

/// Index of `t_ij` in [`M010_VARS`].
pub fn m010_var(i: usize, j: usize) -> usize {
    (i - 2) + 3 * (j - 1)
}

fn tv(i: usize, j: usize) -> MultiPoly {
    MultiPoly::var(9, m010_var(i, j))
}

/// Numerator and denominator of `[a, b, c, d]` for polynomial entries.
fn cross_ratio_symbolic(a: &MultiPoly, b: &MultiPoly, c: &MultiPoly, d: &MultiPoly) -> (MultiPoly, MultiPoly) {
    (a.sub(c).mul(&b.sub(d)), a.sub(d).mul(&b.sub(c)))
}

/// Numerator of `Eq(i, j, j')`: the two reconstructions
/// `z_i = [1, t_2j, t_3j, t_ij]` from the pairs `j` and `j'` agree.
pub fn m010_equation(i: usize, j: usize, jp: usize) -> MultiPoly {
    let one = MultiPoly::one(9);
    let (n1, d1) = cross_ratio_symbolic(&one, &tv(2, j), &tv(3, j), &tv(i, j));
    let (n2, d2) = cross_ratio_symbolic(&one, &tv(2, jp), &tv(3, jp), &tv(i, jp));
    n1.mul(&d2).sub(&n2.mul(&d1))
}

/// `(h_1, h_2, h_3) = (Eq(4,1,2), Eq(4,1,3), Eq(4,2,3))`.
pub fn m010_system() -> Vec<MultiPoly> {
    vec![m010_equation(4, 1, 2), m010_equation(4, 1, 3), m010_equation(4, 2, 3)]
}

/// Numerator of `p(n_1/d_1, ..., n_k/d_k)` where variable `i` has
/// denominator `dens[den_of[i]]`, over the least common power of each
/// distinct denominator.
pub fn compose_rational(p: &MultiPoly, nums: &[MultiPoly], dens: &[MultiPoly], den_of: &[usize]) -> MultiPoly {
    let n = nums[0].nvars();
    let mut top = vec![0i32; dens.len()];
    for (m, _) in p.terms() {
        let mut g = vec![0i32; dens.len()];
        for (i, &e) in m.0.iter().enumerate() {
            g[den_of[i]] += e;
        }
        for (t, x) in top.iter_mut().zip(g) {
            *t = (*t).max(x);
        }
    }
    // Power tables: terms share most of their factors.
    let table = |q: &MultiPoly, top: usize| -> Vec<MultiPoly> {
        let mut v = vec![MultiPoly::one(n)];
        for k in 0..top {
            let next = v[k].mul(q);
            v.push(next);
        }
        v
    };
    let num_pows: Vec<Vec<MultiPoly>> = nums.iter().enumerate().map(|(i, q)| table(q, p.terms().map(|(m, _)| m.0[i].max(0) as usize).max().unwrap_or(0))).collect();
    let den_pows: Vec<Vec<MultiPoly>> = dens.iter().zip(&top).map(|(d, &t)| table(d, t as usize)).collect();
    let mut acc = MultiPoly::zero(n);
    for (m, c) in p.terms() {
        let mut t = MultiPoly::constant(n, c.clone());
        let mut g = vec![0i32; dens.len()];
        for (i, &e) in m.0.iter().enumerate() {
            t = t.mul(&num_pows[i][e as usize]);
            g[den_of[i]] += e;
        }
        for k in 0..dens.len() {
            t = t.mul(&den_pows[k][(top[k] - g[k]) as usize]);
        }
        acc = acc.add(&t);
    }
    acc
}

/// Point variables `x1, y1, x2, y2, x3, y3, z4` of the ten-point
/// configuration with `z_1 = inf, z_2 = 0, z_3 = 1`.
pub const M010_POINT_VARS: [&str; 7] = ["x1", "y1", "x2", "y2", "x3", "y3", "z4"];

/// The inverse map in the `t_ij`, as numerators, distinct denominators and
/// the denominator index of each point variable.
fn m010_inverse_map() -> (Vec<MultiPoly>, Vec<MultiPoly>, Vec<usize>) {
    let one = MultiPoly::one(9);
    let mut nums = Vec::new();
    let mut dens = Vec::new();
    let mut den_of = Vec::new();
    for j in 1..=3 {
        let ynum = tv(3, j).sub(&one);
        nums.push(tv(2, j).mul(&ynum));
        nums.push(ynum);
        dens.push(tv(3, j).sub(&tv(2, j)));
        den_of.extend([j - 1, j - 1]);
    }
    let (zn, zd) = cross_ratio_symbolic(&one, &tv(2, 1), &tv(3, 1), &tv(4, 1));
    nums.push(zn);
    dens.push(zd);
    den_of.push(3);
    (nums, dens, den_of)
}

/// Polynomials whose vanishing means two marked points collide or the
/// inverse map is undefined: numerators of all differences among
/// `0, 1, z_4, x_j, y_j` and the denominators of the inverse map.
pub fn m010_peripheral() -> Vec<MultiPoly> {
    let (nums, dens, den_of) = m010_inverse_map();
    let mut pts: Vec<MultiPoly> = vec![MultiPoly::zero(7), MultiPoly::one(7)];
    pts.extend((0..7).map(|i| MultiPoly::var(7, i)));
    let mut out = Vec::new();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            push_unique(&mut out, &compose_rational(&pts[a].sub(&pts[b]), &nums, &dens, &den_of));
        }
    }
    let one = MultiPoly::one(9);
    for d in dens.iter().chain([one.sub(&tv(4, 1)), tv(2, 1).sub(&tv(3, 1))].iter()) {
        push_unique(&mut out, d);
    }
    out.retain(|p| p.total_degree().unwrap_or(0) > 0);
    out
}

/// Opposite-residue conditions for
/// `omega = z (z - 1)(z - z_4) dz / prod (z - x_j)(z - y_j)`, pulled back to
/// the `t_ij`.
pub fn m010_opposite_residue() -> Vec<MultiPoly> {
    let n = 7;
    let v = |i: usize| MultiPoly::var(n, i);
    let cfg = SymbolicConfig {
        vars: vars_of(&M010_POINT_VARS),
        zeros: vec![
            (SymPoint::Infinity, 1),
            (SymPoint::Finite(MultiPoly::zero(n)), 1),
            (SymPoint::Finite(MultiPoly::one(n)), 1),
            (SymPoint::Finite(v(6)), 1),
        ],
        poles: (0..6).map(v).collect(),
        residues: None,
        parts: (0..3).map(|i| vec![2 * i, 2 * i + 1]).collect(),
    };
    let conds = stable_form_conditions(ConditionKind::OppositeResidue, &cfg).expect("pairs");
    let (nums, dens, den_of) = m010_inverse_map();
    let per = m010_peripheral();
    let mut out = Vec::new();
    for c in &conds {
        // Peripheral factors are saturated away later; dropping them now
        // keeps the conditions small.
        let mut p = compose_rational(c, &nums, &dens, &den_of);
        for f in &per {
            while let Some(q) = p.div_exact(f) {
                p = q;
            }
        }
        push_unique(&mut out, &p);
    }
    out
}

// ---------------------------------------------------------------------------
// The odd (4) stratum.

/// Generators `f_1, f_2` of the surface in `(x1, y1, x2, y2)`.
pub fn odd4_surface() -> Vec<MultiPoly> {
    let v = ["x1", "y1", "x2", "y2"];
    vec![
        MultiPoly::parse("x1*x2 + y1*x2 - x2^2 + x1*y2 + y1*y2 - y2^2 + 2", &v, false).expect("f1"),
        MultiPoly::parse("x1^2 + y1^2 - x2^2 - y2^2", &v, false).expect("f2"),
    ]
}

/// `R = (R_1, R_2, R_3)` with `R_k = [x_i, y_i, x_j, y_j]` and `x_3 = 1`,
/// `y_3 = -1`.
pub fn odd4_cross_ratios<S: Scalar>(x1: &S, y1: &S, x2: &S, y2: &S) -> Result<[S; 3], CrossRatioError> {
    let one = x1.one_like();
    let m1 = one.neg();
    Ok([cross_ratio_affine(x2, y2, &one, &m1)?, cross_ratio_affine(x1, y1, &one, &m1)?, cross_ratio_affine(x1, y1, x2, y2)?])
}

/// A point of `f_1 = f_2 = 0` over C with the given `x_1, y_1`: `x_2, y_2`
/// are the roots of `T^2 - p T + (p^2 - s)/2` with `s = x_1^2 + y_1^2` and
/// `p = (s - 2)/(x_1 + y_1)`.
pub fn odd4_sample(x1: f64, y1: f64) -> Option<[num_complex::Complex64; 4]> {
    use num_complex::Complex64 as C;
    if (x1 + y1).abs() < 1e-6 {
        return None;
    }
    let s = x1 * x1 + y1 * y1;
    let p = (s - 2.0) / (x1 + y1);
    let disc = C::new(p * p - 2.0 * (p * p - s), 0.0).sqrt();
    Some([C::new(x1, 0.0), C::new(y1, 0.0), (C::new(p, 0.0) + disc) / 2.0, (C::new(p, 0.0) - disc) / 2.0])
}

/// The hyperelliptic cross-ratio map
/// `(x_1, x_2) -> ((x_2-1)/(x_2+1), (1-x_1)/(1+x_1), (x_1-x_2)/(x_1+x_2))`.
pub fn hyp4_cross_ratios<S: Scalar>(x1: &S, x2: &S) -> Option<[S; 3]> {
    let one = x1.one_like();
    Some([x2.sub(&one).div(&x2.add(&one))?, one.sub(x1).div(&one.add(x1))?, x1.sub(x2).div(&x1.add(x2))?])
}

// ---------------------------------------------------------------------------
// Degenerations.

/// Marking carried by a vertex of a degeneration tree; indices start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    Zero(usize),
    X(usize),
    Y(usize),
}

/// Stable limit shape: a tree whose vertices carry markings and whose edges
/// carry twist counts `d_e >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecoratedTree {
    pub labels: Vec<Vec<Label>>,
    pub edges: Vec<(usize, usize)>,
    pub twists: Vec<i64>,
}

impl DecoratedTree {
    pub fn new(labels: Vec<Vec<Label>>, edges: Vec<(usize, usize)>) -> Result<Self, CrossRatioError> {
        let t = DecoratedTree { twists: vec![0; edges.len()], labels, edges };
        t.validate()?;
        Ok(t)
    }

    pub fn with_twists(&self, d: &[i64]) -> Result<Self, CrossRatioError> {
        let t = DecoratedTree { twists: d.to_vec(), ..self.clone() };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), CrossRatioError> {
        let nv = self.labels.len();
        let bad = |s: &str| Err(CrossRatioError::InvalidTree(s.into()));
        if nv == 0 || self.edges.len() + 1 != nv {
            return bad("a tree on v vertices has v - 1 edges");
        }
        if self.twists.len() != self.edges.len() || self.twists.iter().any(|&d| d < 0) {
            return bad("one nonnegative twist per edge");
        }
        if self.edges.iter().any(|&(a, b)| a >= nv || b >= nv || a == b) {
            return bad("edge endpoint out of range");
        }
        if self.reach(0).iter().any(|&r| !r) {
            return bad("not connected");
        }
        if self.labels.iter().any(|l| !l.iter().any(|x| matches!(x, Label::Zero(_)))) {
            return bad("every vertex carries a zero");
        }
        let mut all: Vec<Label> = self.labels.iter().flatten().copied().collect();
        let n = all.len();
        all.sort_by_key(|l| format!("{l:?}"));
        all.dedup();
        if all.len() != n {
            return bad("a marking appears twice");
        }
        Ok(())
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().enumerate().filter_map(move |(k, &(a, b))| {
            if a == v {
                Some((b, k))
            } else if b == v {
                Some((a, k))
            } else {
                None
            }
        })
    }

    fn reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.labels.len()];
        let mut q = VecDeque::from([s]);
        seen[s] = true;
        while let Some(v) = q.pop_front() {
            for (u, _) in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    q.push_back(u);
                }
            }
        }
        seen
    }

    /// Vertices and edges of the path from `a` to `b`.
    fn path(&self, a: usize, b: usize) -> (Vec<usize>, Vec<usize>) {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.labels.len()];
        let mut q = VecDeque::from([a]);
        let mut seen = vec![false; self.labels.len()];
        seen[a] = true;
        while let Some(v) = q.pop_front() {
            for (u, k) in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((v, k));
                    q.push_back(u);
                }
            }
        }
        let (mut vs, mut es) = (vec![b], vec![]);
        let mut cur = b;
        while let Some((p, k)) = parent[cur] {
            vs.push(p);
            es.push(k);
            cur = p;
        }
        vs.reverse();
        es.reverse();
        (vs, es)
    }

    pub fn vertex_of(&self, l: Label) -> Option<usize> {
        self.labels.iter().position(|ls| ls.contains(&l))
    }

    /// Position on `path` of the vertex closest to `v`.
    fn project(&self, path: &[usize], v: usize) -> usize {
        let (vs, _) = self.path(v, path[0]);
        let hit = vs.iter().find(|u| path.contains(u)).expect("path start is reached");
        path.iter().position(|u| u == hit).unwrap()
    }
}

/// `e_abj`: the signed sum of twists over the part `S_j` of the path from
/// `z_a` to `z_b` between the projections of `x_j` and `y_j`; positive when
/// `proj(x_j) -> proj(y_j)` runs along `z_a -> z_b`.
pub fn degeneration_exponents(tree: &DecoratedTree, zeros: (usize, usize), pair: usize) -> Result<i64, CrossRatioError> {
    tree.validate()?;
    let find = |l: Label| tree.vertex_of(l).ok_or_else(|| CrossRatioError::InvalidTree(format!("{l:?} is not on the tree")));
    if zeros.0 == zeros.1 {
        return Err(CrossRatioError::InvalidTree("the two zeros must differ".into()));
    }
    let (va, vb) = (find(Label::Zero(zeros.0))?, find(Label::Zero(zeros.1))?);
    let (vx, vy) = (find(Label::X(pair))?, find(Label::Y(pair))?);
    let (vs, es) = tree.path(va, vb);
    let (p, q) = (tree.project(&vs, vx), tree.project(&vs, vy));
    let s: i64 = es[p.min(q)..p.max(q)].iter().map(|&k| tree.twists[k]).sum();
    Ok(if p <= q { s } else { -s })
}

/// Row of exponents over the columns `R_ij`, `j = 1..3` outer and
/// `i = 2..4` inner, i.e. `(R21, R31, R41, R22, ..., R43)`.
pub fn degeneration_row(tree: &DecoratedTree) -> Result<Vec<i64>, CrossRatioError> {
    let mut row = Vec::with_capacity(9);
    for j in 1..=3 {
        for i in 2..=4 {
            row.push(degeneration_exponents(tree, (1, i), j)?);
        }
    }
    Ok(row)
}

/// One row per unit twist vector.
pub fn degeneration_matrix(tree: &DecoratedTree) -> Result<Vec<Vec<i64>>, CrossRatioError> {
    (0..tree.edges.len())
        .map(|k| {
            let mut d = vec![0; tree.edges.len()];
            d[k] = 1;
            degeneration_row(&tree.with_twists(&d)?)
        })
        .collect()
}

/// The three stable limit shapes of the ten-point configuration. In the
/// third the zero `z_1` sits alone on the central vertex.
pub fn fig1_trees() -> [DecoratedTree; 3] {
    use Label::*;
    let chain = vec![(0, 1), (1, 2), (2, 3)];
    let a = DecoratedTree::new(vec![vec![Zero(1), X(1), X(2)], vec![Zero(2), X(3)], vec![Zero(3), Y(3)], vec![Zero(4), Y(1), Y(2)]], chain.clone());
    let b = DecoratedTree::new(vec![vec![Zero(1), X(1), X(2)], vec![Zero(2), X(3)], vec![Zero(3), Y(1)], vec![Zero(4), Y(2), Y(3)]], chain);
    let c = DecoratedTree::new(
        vec![vec![Zero(1)], vec![Zero(2), X(2), Y(1)], vec![Zero(3), X(1), Y(3)], vec![Zero(4), X(3), Y(2)]],
        vec![(0, 1), (0, 2), (0, 3)],
    );
    [a.expect("tree A"), b.expect("tree B"), c.expect("tree C")]
}

/// `M_1, M_2, M_3` as stated.
pub fn fig1_matrices() -> [Vec<Vec<i64>>; 3] {
    [
        vec![vec![1, 1, 1, 1, 1, 1, 0, 0, 0], vec![0, 1, 1, 0, 1, 1, 0, 1, 1], vec![0, 0, 1, 0, 0, 1, 0, 0, 0]],
        vec![vec![1, 1, 1, 1, 1, 1, 0, 0, 0], vec![0, 1, 1, 0, 1, 1, 0, 1, 1], vec![0, 0, 0, 0, 0, 1, 0, 0, 1]],
        vec![vec![1, 0, 0, -1, 0, 0, 0, 0, 0], vec![0, -1, 0, 0, 0, 0, 0, 1, 0], vec![0, 0, 0, 0, 0, 1, 0, 0, -1]],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, CycloField, UniPoly};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> ProjPoint<Rational> {
        ProjPoint::finite(rat(n, d))
    }

    fn inf() -> ProjPoint<Rational> {
        ProjPoint::infinity(&int(0))
    }

    #[test]
    fn cross_ratio_examples() {
        assert_eq!(cross_ratio(&q(0, 1), &q(1, 1), &q(2, 1), &q(3, 1)).unwrap(), rat(4, 3));
        let t = q(7, 5);
        assert_eq!(cross_ratio(&inf(), &q(0, 1), &q(1, 1), &t).unwrap(), rat(7, 5));
        // Follows the displayed formula, not its squared simplification.
        assert_eq!(cross_ratio(&q(2, 1), &q(-2, 1), &q(1, 1), &q(-1, 1)).unwrap(), rat(1, 9));
        assert_eq!(cross_ratio(&q(1, 1), &q(1, 1), &q(2, 1), &q(3, 1)), Err(CrossRatioError::DegenerateQuadruple));
    }

    fn arb_q() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    fn distinct(v: &[Rational]) -> bool {
        (0..v.len()).all(|a| (a + 1..v.len()).all(|b| v[a] != v[b]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn mobius_invariance(z in prop::collection::vec(arb_q(), 4), m in prop::collection::vec(arb_q(), 4)) {
            prop_assume!(distinct(&z));
            let (a, b, c, d) = (&m[0], &m[1], &m[2], &m[3]);
            prop_assume!(a * d - b * c != int(0));
            let pts: Vec<ProjPoint<Rational>> = z.iter().map(|x| ProjPoint::finite(x.clone())).collect();
            let img: Vec<ProjPoint<Rational>> = z.iter().map(|x| ProjPoint::new(a * x + b, c * x + d).unwrap()).collect();
            let before = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            prop_assert_eq!(&before, &cross_ratio(&img[0], &img[1], &img[2], &img[3]).unwrap());
            let swapped = cross_ratio(&pts[0], &pts[1], &pts[3], &pts[2]).unwrap();
            prop_assert_eq!(before * swapped, int(1));
        }
    }

    fn cfg(zeros: &[(ProjPoint<Rational>, u32)], poles: &[ProjPoint<Rational>]) -> StableFormConfig<Rational> {
        StableFormConfig { zeros: zeros.to_vec(), poles: poles.to_vec(), parts: vec![] }
    }

    #[test]
    fn residues_of_small_forms() {
        // z dz / ((z - 1)(z + 1)) also has a pole at infinity.
        let c = cfg(&[(q(0, 1), 1)], &[q(1, 1), q(-1, 1), inf()]);
        assert_eq!(residues_raw(&c).unwrap(), vec![rat(1, 2), rat(1, 2), int(-1)]);
        // C z^4 dz / prod (z^2 - x_i^2) at x = (1, 2, 3).
        let poles: Vec<_> = [1, -1, 2, -2, 3, -3].iter().map(|&x| q(x, 1)).collect();
        let c = cfg(&[(q(0, 1), 4)], &poles);
        let r = residues(&c).unwrap();
        let want: Vec<Rational> = [5, -5, -64, 64, 81, -81].iter().map(|&x| rat(x, 5)).collect();
        assert_eq!(r, want);
    }

    #[test]
    fn config_validation() {
        let c = cfg(&[(q(0, 1), 2)], &[q(1, 1), q(2, 1)]);
        assert!(matches!(c.validate(), Err(CrossRatioError::InvalidConfig(_))));
        let c = cfg(&[(q(1, 1), 0)], &[q(1, 1), q(2, 1)]);
        assert!(matches!(c.validate(), Err(CrossRatioError::CoincidentMarkings(..))));
        let mut c = cfg(&[(q(0, 1), 1)], &[q(1, 1), q(2, 1), q(3, 1)]);
        c.parts = vec![vec![0, 1], vec![2]];
        assert!(matches!(c.validate(), Err(CrossRatioError::InvalidConfig(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn residue_theorem(pts in prop::collection::vec(arb_q(), 6), split in 0usize..3) {
            prop_assume!(distinct(&pts));
            let zeros = vec![(ProjPoint::finite(pts[0].clone()), split as u32), (ProjPoint::finite(pts[1].clone()), 2 - split as u32)];
            let poles: Vec<_> = pts[2..].iter().map(|x| ProjPoint::finite(x.clone())).collect();
            let c = StableFormConfig { zeros, poles, parts: vec![] };
            let r = residues_raw(&c).unwrap();
            prop_assert!(r.iter().fold(int(0), |a, x| a + x).is_zero());
        }
    }

    fn vs(c: &SymbolicConfig, s: &str) -> MultiPoly {
        MultiPoly::parse(s, &c.var_names(), false).unwrap()
    }

    fn same_up_to_scale(a: &MultiPoly, b: &MultiPoly) -> bool {
        a.primitive() == b.primitive() || a.primitive() == b.neg().primitive()
    }

    #[test]
    fn hyperelliptic_zero_order_system() {
        let c = SymbolicConfig::hyp4();
        let conds = stable_form_conditions(ConditionKind::ZeroOrder, &c).unwrap();
        assert_eq!(conds.len(), 2);
        assert!(same_up_to_scale(&conds[0], &vs(&c, "r1*x2*x3 + r2*x3*x1 + r3*x1*x2")));
        assert!(same_up_to_scale(&conds[1], &vs(&c, "r1*x1*(x2^2 + x3^2) + r2*x2*(x3^2 + x1^2) + r3*x3*(x1^2 + x2^2)")));
        // At x = (1, 2, 3) the rows are (6, 3, 2) and (13, 20, 15); their
        // cross product (5, -64, 81) solves both.
        let rows: Vec<Vec<Rational>> = conds
            .iter()
            .map(|p| (3..6).map(|k| p.diff(k).eval_q(&[int(1), int(2), int(3), int(0), int(0), int(0)]).unwrap()).collect())
            .collect();
        let sol = [int(5), int(-64), int(81)];
        for row in &rows {
            assert!(row.iter().zip(&sol).fold(int(0), |a, (x, y)| a + x * y).is_zero());
        }
        assert_eq!(QMatrix::from_rows(rows).nullspace().len(), 1);
    }

    #[test]
    fn odd4_opposite_residue_is_p1_p2() {
        let c = SymbolicConfig::odd4();
        let conds = stable_form_conditions(ConditionKind::OppositeResidue, &c).unwrap();
        let p1 = vs(&c, "(y1 - x2)*(y1 - y2)*(y1^2 - 1) - (x1 - x2)*(x1 - y2)*(x1^2 - 1)");
        let p2 = vs(&c, "(y2 - x1)*(y2 - y1)*(y2^2 - 1) - (x2 - x1)*(x2 - y1)*(x2^2 - 1)");
        assert!(same_up_to_scale(&conds[0], &p1));
        assert!(same_up_to_scale(&conds[1], &p2));
    }

    #[test]
    fn s22_leading_term() {
        let c = SymbolicConfig::s22();
        let conds = stable_form_conditions(ConditionKind::OppositeResidue, &c).unwrap();
        assert_eq!(conds.len(), 3);
        for (k, d) in conds.iter().enumerate() {
            // Coefficient of x_k^4 as a polynomial in zeta_k.
            let lead = MultiPoly::from_terms(6, d.terms().filter(|(m, _)| m.0[k] == 4).map(|(m, c)| (m.0.clone(), c.clone())));
            let mut e = vec![0; 6];
            e[k] = 4;
            let z = MultiPoly::var(6, 3 + k);
            let want = MultiPoly::monomial(6, e, int(1)).mul(&z.pow(2)).mul(&MultiPoly::one(6).sub(&z.pow(2)));
            assert!(same_up_to_scale(&lead, &want), "{}", lead.display(&c.var_names()));
        }
    }

    #[test]
    fn residue21_recipe() {
        let c = SymbolicConfig::residue21();
        let conds = stable_form_conditions(ConditionKind::PartitionResidueSum, &c).unwrap();
        let want = vs(&c, "zeta^2*(x1 - 1)*(x1 - u2)*(x1 - u3) - (zeta*x1 - 1)*(zeta*x1 - u2)*(zeta*x1 - u3)");
        // Divided by zeta - 1, which is a unit off the diagonal.
        assert_eq!(conds.len(), 1);
        let zm1 = vs(&c, "zeta - 1");
        assert!(same_up_to_scale(&conds[0], &want) || same_up_to_scale(&conds[0].mul(&zm1), &want));
    }

    #[test]
    fn solveforzeta_recipe() {
        let c = SymbolicConfig::one_part_1111();
        let conds = stable_form_conditions(ConditionKind::ZeroOrder, &c).unwrap();
        let r4 = "(-r1 - r2 - r3)";
        let lin = vs(&c, &format!("r1 + r2*zeta2 + r3*zeta3 + {r4}*zeta4"));
        let inv = vs(&c, &format!("r1*zeta2*zeta3*zeta4 + r2*zeta3*zeta4 + r3*zeta2*zeta4 + {r4}*zeta2*zeta3"));
        assert_eq!(conds.len(), 2);
        assert!(conds.iter().any(|p| same_up_to_scale(p, &lin)));
        assert!(conds.iter().any(|p| same_up_to_scale(p, &inv)));
    }

    #[test]
    fn zero_order_needs_residues() {
        assert!(matches!(stable_form_conditions(ConditionKind::ZeroOrder, &SymbolicConfig::odd4()), Err(CrossRatioError::UnsupportedNormalization(_))));
    }

    fn cubic_field() -> NumberField {
        NumberField::new(&UniPoly::from_ints(&[-1, -2, 1, 1])).unwrap()
    }

    #[test]
    fn cre_exponents_oracle() {
        let f = cubic_field();
        let a = f.gen();
        let triple = [f.rational(&int(1)), a.clone(), a.mul(&a)];
        let b = cre_exponents(&f, &triple).unwrap();
        let s = f.trace_dual_basis(&triple).unwrap();
        if let Some(b) = &b {
            // Oracle: sum b_i / s_i = 0.
            let t = (0..3).fold(f.rational(&int(0)), |acc, i| acc.add(&f.rational(&int(b[i])).div(&s[i]).unwrap()));
            assert!(t.is_zero_elem());
            assert!(b[0] > 0);
        } else {
            let prods: Vec<Vec<Rational>> = (0..3).map(|i| s[(i + 1) % 3].mul(&s[(i + 2) % 3]).coords()).collect();
            assert_eq!(QMatrix::from_rows(prods).rank(), 3);
        }
        let two = f.rational(&int(2));
        let scaled = [triple[0].mul(&two), triple[1].mul(&two), triple[2].mul(&two)];
        assert_eq!(cre_exponents(&f, &scaled).unwrap(), b);
        let dep = [triple[0].clone(), triple[0].mul(&two), a];
        assert_eq!(cre_exponents(&f, &dep), Err(CrossRatioError::DependentBasis));
    }

    #[test]
    fn cre_exponents_admissible_case() {
        // Taking s = (1/u_1, 1/u_2, 1/u_3) with u_1 + u_2 + u_3 = 0 forces
        // b = (1, 1, 1); the triple is the trace dual of s.
        let f = cubic_field();
        let a = f.gen();
        let u = [f.rational(&int(1)), a.clone(), a.add(&f.rational(&int(1))).neg()];
        let s: Vec<FieldElement> = u.iter().map(|x| x.inv().unwrap()).collect();
        let r = f.trace_dual_basis(&s).unwrap();
        let b = cre_exponents(&f, &[r[0].clone(), r[1].clone(), r[2].clone()]).unwrap();
        assert_eq!(b, Some(vec![1, 1, 1]));
    }

    #[test]
    fn check_cre_values() {
        let pairs = [(int(2), int(-2)), (int(3), int(-3)), (int(5), int(-5))];
        let c = check_cre(&pairs, &[1, 1, 1]).unwrap();
        let direct = c.cross_ratios.iter().fold(int(1), |a, x| a * x);
        assert_eq!(c.value, direct);
        assert!(!c.verdict.root_of_unity);
        // [x, -x, u, -u] = ((x - u)/(x + u))^2; exponents (1, -1, 0) on
        // pairs with R_1 = R_2 give exactly 1.
        let pairs = [(int(2), int(-2)), (int(2), int(-2)), (int(3), int(-3))];
        assert!(check_cre(&pairs, &[1, 1, 1]).is_err());
        let pairs = [(int(7), int(-7)), (int(3), int(-3)), (int(3), int(-3))];
        assert!(check_cre(&pairs, &[0, 1, -1]).is_err());
        let pairs = [(int(7), int(-7)), (int(2), int(-2)), (int(3), int(-3))];
        assert_eq!(check_cre(&pairs, &[0, 0, 0]).unwrap_err(), CrossRatioError::ZeroExponents);
        let degenerate = [(int(1), int(1)), (int(2), int(-2)), (int(3), int(-3))];
        assert_eq!(check_cre(&degenerate, &[1, 1, 1]).unwrap_err(), CrossRatioError::DegenerateQuadruple);
    }

    #[test]
    fn root_of_unity_detection() {
        let k = CycloField::new(12);
        assert_eq!(k.zeta(1).root_of_unity().order, Some(12));
        assert_eq!(k.zeta(3).root_of_unity().order, Some(4));
        assert!(!k.zeta(1).add(&k.rational(&int(1))).root_of_unity().root_of_unity);
        assert_eq!(int(-1).root_of_unity().order, Some(2));
        let z = num_complex::Complex64::from_polar(1.0, 0.7);
        let v = z.root_of_unity();
        assert!(v.root_of_unity && v.grade == Grade::Numeric);
    }

    /// The two-part `(4; 1, 1)` form with `x_1 = 1`, `x_2 = zeta_x^2`,
    /// `u_1 = -zeta_x/zeta_u`, `u_2 = zeta_u^2 u_1` in `Q(zeta_n)`.
    fn form_411(n: u32, a: i64, b: i64) -> (CycloField, StableFormConfig<FieldElement>, FieldElement) {
        let k = CycloField::new(n);
        let (zx, zu) = (k.zeta(a), k.zeta(b));
        let one = k.rational(&int(1));
        let u1 = zx.div(&zu).unwrap().neg();
        let poles = vec![one.clone(), zx.mul(&zx), u1.clone(), zu.mul(&zu).mul(&u1)];
        let r2 = k.conj(&zx).sub(&zx).div(&k.conj(&zu).sub(&zu)).unwrap();
        let c = StableFormConfig {
            zeros: vec![(ProjPoint::finite(one.zero_like()), 1), (ProjPoint::infinity(&one), 1)],
            poles: poles.into_iter().map(ProjPoint::finite).collect(),
            parts: vec![vec![0, 1], vec![2, 3]],
        };
        (k, c, r2)
    }

    #[test]
    fn torsion_check_two_part_form() {
        let (_, c, r2) = form_411(12, 1, 2);
        let r = residues(&c).unwrap();
        let one = r2.one_like();
        assert_eq!(r, vec![one.clone(), one.neg(), r2.clone(), r2.neg()]);
        assert_eq!(torsion_config_check(&c, 12).unwrap(), TorsionVerdict::Satisfies { grade: Grade::Exact });
        // Order 6 does not divide 4.
        assert!(matches!(
            torsion_config_check(&c, 4).unwrap(),
            TorsionVerdict::Violates { condition: TorsionCondition::CrossRatioTorsion, .. }
        ));
        // zeta_x = zeta_u makes r_2 = 1: the residues span only Q.
        let (_, c, _) = form_411(12, 1, 1);
        assert!(matches!(torsion_config_check(&c, 12).unwrap(), TorsionVerdict::Violates { condition: TorsionCondition::ResidueSpan, .. }));
    }

    #[test]
    fn torsion_check_rational_violations() {
        // Cross-ratio [0, inf, 1, 2] = 1/2 is not a root of unity.
        let mut c = cfg(&[(q(0, 1), 1), (inf(), 1)], &[q(1, 1), q(2, 1), q(-1, 1), q(-2, 1)]);
        c.parts = vec![vec![0, 1, 2, 3]];
        assert!(matches!(torsion_config_check(&c, 6).unwrap(), TorsionVerdict::Violates { .. }));
        c.parts = vec![vec![0, 2], vec![1, 3]];
        assert!(matches!(
            torsion_config_check(&c, 6).unwrap(),
            TorsionVerdict::Violates { condition: TorsionCondition::PartResidueSum, .. }
        ));
    }

    fn random_config(rng: &mut ChaCha8Rng) -> MarkedConfig<Rational> {
        loop {
            let mut r = || rat(rng.gen_range(-40..40), rng.gen_range(1..9));
            let c = MarkedConfig { zeros: vec![r()], pairs: (0..3).map(|_| (r(), r())).collect() };
            if c.validate().is_ok() {
                return c;
            }
        }
    }

    #[test]
    fn crmin_examples_and_round_trip() {
        let c = MarkedConfig { zeros: vec![], pairs: vec![(int(2), int(3))] };
        let t = crmin_forward(&c).unwrap();
        assert_eq!(t[&(2, 1)], rat(2, 3));
        assert_eq!(t[&(3, 1)], rat(1, 2));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let c = random_config(&mut rng);
            let t = crmin_forward(&c).unwrap();
            assert_eq!(crmin_inverse(&t).unwrap(), c);
        }
        let mut bad = BTreeMap::new();
        bad.insert((2, 1), rat(1, 2));
        bad.insert((3, 1), rat(1, 2));
        assert!(matches!(crmin_inverse(&bad), Err(CrossRatioError::DomainViolation(_))));
    }

    #[test]
    fn m010_system_vanishes_on_configurations() {
        let hs = m010_system();
        assert_eq!(hs.iter().map(|h| h.nterms()).collect::<Vec<_>>(), vec![24, 24, 24]);
        assert!(hs.iter().all(|h| h.total_degree() == Some(4)));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let t = cr_coordinates(&random_config(&mut rng)).unwrap();
            let pt: Vec<Rational> = (0..9).map(|k| t[&(k % 3 + 2, k / 3 + 1)].clone()).collect();
            assert!(hs.iter().all(|h| h.eval_q(&pt).unwrap().is_zero()));
        }
        // Exchanging j and j' flips the sign.
        assert_eq!(m010_equation(4, 2, 1), hs[0].neg());
    }

    #[test]
    fn m010_peripheral_and_residue_vanish_where_expected() {
        let per = m010_peripheral();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = cr_coordinates(&random_config(&mut rng)).unwrap();
        let pt: Vec<Rational> = (0..9).map(|k| t[&(k % 3 + 2, k / 3 + 1)].clone()).collect();
        assert!(per.iter().all(|p| !p.eval_q(&pt).unwrap().is_zero()));
        assert_eq!(m010_opposite_residue().len(), 3);
    }

    #[test]
    fn degeneration_matrices_reproduced() {
        let want = fig1_matrices();
        for (t, m) in fig1_trees().iter().zip(want.iter()) {
            assert_eq!(&degeneration_matrix(t).unwrap(), m);
        }
        let zero = fig1_trees()[0].clone();
        assert_eq!(degeneration_row(&zero).unwrap(), vec![0; 9]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn degeneration_is_additive(k in 0usize..3, d1 in prop::collection::vec(0i64..5, 3), d2 in prop::collection::vec(0i64..5, 3)) {
            let t = &fig1_trees()[k];
            let sum: Vec<i64> = d1.iter().zip(&d2).map(|(a, b)| a + b).collect();
            let r1 = degeneration_row(&t.with_twists(&d1).unwrap()).unwrap();
            let r2 = degeneration_row(&t.with_twists(&d2).unwrap()).unwrap();
            let rs = degeneration_row(&t.with_twists(&sum).unwrap()).unwrap();
            prop_assert_eq!(rs, r1.iter().zip(&r2).map(|(a, b)| a + b).collect::<Vec<_>>());
        }
    }

    #[test]
    fn invalid_trees() {
        use Label::*;
        assert!(DecoratedTree::new(vec![vec![Zero(1)], vec![X(1)]], vec![(0, 1)]).is_err());
        assert!(DecoratedTree::new(vec![vec![Zero(1)], vec![Zero(2)]], vec![]).is_err());
        let t = DecoratedTree::new(vec![vec![Zero(1), X(1)], vec![Zero(2), Y(1)]], vec![(0, 1)]).unwrap();
        assert!(degeneration_exponents(&t, (1, 1), 1).is_err());
        assert_eq!(degeneration_exponents(&t.with_twists(&[3]).unwrap(), (1, 2), 1).unwrap(), 3);
        assert_eq!(degeneration_exponents(&t.with_twists(&[3]).unwrap(), (2, 1), 1).unwrap(), -3);
    }

    #[test]
    fn odd4_samples_lie_on_the_surface() {
        let f = odd4_surface();
        let pt = odd4_sample(0.3, 1.7).unwrap();
        for p in &f {
            assert!(p.eval(&pt).unwrap().norm() <= 1e-9 * p.abs_scale(&pt));
        }
        let smooth = [int(1), int(-1), int(1), int(-1)];
        assert!(f.iter().all(|p| p.eval_q(&smooth).unwrap().is_zero()));
    }

    #[test]
    fn hyp4_map_lands_on_cubic() {
        let cubic = MultiPoly::parse("r1*r2*r3 + r1 + r2 + r3", &["r1", "r2", "r3"], false).unwrap();
        let r = hyp4_cross_ratios(&rat(3, 7), &rat(-5, 2)).unwrap();
        assert!(cubic.eval_q(&r).unwrap().is_zero());
    }
}
