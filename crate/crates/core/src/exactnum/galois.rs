use super::field::is_irreducible;
use super::{Rational, UniPoly};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GaloisClass {
    S4,
    A4,
    D4,
    C4,
    V4,
}

impl fmt::Display for GaloisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GaloisClass::S4 => "S4",
            GaloisClass::A4 => "A4",
            GaloisClass::D4 => "D4",
            GaloisClass::C4 => "C4",
            GaloisClass::V4 => "V4",
        };
        f.write_str(s)
    }
}

fn is_rational_square(x: &Rational) -> bool {
    if x.is_negative() {
        return false;
    }
    let sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(x.numer()) && sq(x.denom())
}

/// Discriminant of a monic polynomial via the resultant with its derivative.
pub fn discriminant(f: &UniPoly) -> Rational {
    let f = f.monic();
    let n = f.degree().unwrap_or(0);
    let fp = f.derivative();
    // Res(f, f') = prod f'(root) = (-1)^{...} computed by the Euclidean chain.
    let r = resultant(&f, &fp);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    r * Rational::from_integer(sign.into())
}

fn resultant(a: &UniPoly, b: &UniPoly) -> Rational {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else { return Rational::zero() };
    if db == 0 {
        return b.lead().pow(da as i32);
    }
    let r = a.rem(b);
    let Some(dr) = r.degree() else { return Rational::zero() };
    let sign = if da % 2 == 1 && db % 2 == 1 { -1 } else { 1 };
    resultant(b, &r) * b.lead().pow((da - dr) as i32) * Rational::from_integer(sign.into())
}

/// Galois group of an irreducible quartic over Q via its resolvent cubic and
/// discriminant. `None` if the polynomial is not an irreducible quartic.
pub fn quartic_galois_class(f: &UniPoly) -> Option<GaloisClass> {
    if f.degree() != Some(4) || !is_irreducible(f) {
        return None;
    }
    let f = f.monic();
    let (a, b, c, d) = (f.coeff(3), f.coeff(2), f.coeff(1), f.coeff(0));
    let four = Rational::from_integer(4.into());
    let resolvent = UniPoly::new(vec![
        -(&a * &a * &d - &four * &b * &d + &c * &c),
        &a * &c - &four * &d,
        -b.clone(),
        Rational::from_integer(1.into()),
    ]);
    let disc = discriminant(&f);
    let roots = resolvent.rational_roots();
    let class = match roots.len() {
        0 if is_rational_square(&disc) => GaloisClass::A4,
        0 => GaloisClass::S4,
        1 => {
            // Kappe-Warren: C4 iff both quadratics split over Q(sqrt(disc)).
            let r = &roots[0];
            let splits = |p: Rational, q: Rational| {
                let dq = &p * &p - &four * &q;
                dq.is_zero() || is_rational_square(&dq) || is_rational_square(&(&dq * &disc))
            };
            if splits(-r.clone(), d.clone()) && splits(a.clone(), &b - r) {
                GaloisClass::C4
            } else {
                GaloisClass::D4
            }
        }
        _ => GaloisClass::V4,
    };
    Some(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{char_poly, QMatrix};

    #[test]
    fn classic_quartics() {
        assert_eq!(quartic_galois_class(&UniPoly::from_ints(&[1, 0, 0, 0, 1])), Some(GaloisClass::V4));
        assert_eq!(quartic_galois_class(&UniPoly::from_ints(&[-1, -1, 0, 0, 1])), Some(GaloisClass::S4));
        // x^4 + 8x + 12 has group A4.
        assert_eq!(quartic_galois_class(&UniPoly::from_ints(&[12, 8, 0, 0, 1])), Some(GaloisClass::A4));
        // x^4 - 2 has group D4; x^4 + x^3 + x^2 + x + 1 is cyclic.
        assert_eq!(quartic_galois_class(&UniPoly::from_ints(&[-2, 0, 0, 0, 1])), Some(GaloisClass::D4));
        assert_eq!(quartic_galois_class(&UniPoly::from_ints(&[1, 1, 1, 1, 1])), Some(GaloisClass::C4));
        assert_eq!(quartic_galois_class(&UniPoly::from_ints(&[-1, 0, 0, 0, 1])), None);
    }

    #[test]
    fn discriminant_via_companion_oracle() {
        // Oracle: disc = prod_{i<j} (a_i-a_j)^2 for f = (x-1)(x-2)(x-4).
        let f = UniPoly::from_roots(&[Rational::from_integer(1.into()), Rational::from_integer(2.into()), Rational::from_integer(4.into())]);
        assert_eq!(discriminant(&f), Rational::from_integer(36.into()));
        // The characteristic polynomial of a companion matrix recovers f.
        let c = QMatrix::from_ints(&[&[0, 0, 8], &[1, 0, -14], &[0, 1, 7]]);
        assert_eq!(char_poly(&c), f);
    }
}
