//! Small integer lattices in Z^n: Hermite normal form, integer kernels and
//! saturation. Entries are machine integers; arithmetic is checked and
//! overflow panics, which only happens far outside the exponent sizes used
//! here.

use num_integer::Integer;

type Row = Vec<i128>;

fn to_wide(rows: &[Vec<i64>]) -> Vec<Row> {
    rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn to_narrow(rows: Vec<Row>) -> Vec<Vec<i64>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("lattice entry overflow")).collect())
        .collect()
}

fn axpy(dst: &mut Row, a: i128, src: &Row, b: i128) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = a
            .checked_mul(*d)
            .and_then(|x| b.checked_mul(*s).and_then(|y| x.checked_add(y)))
            .expect("lattice entry overflow");
    }
}

/// Divides by the content and makes the first nonzero entry positive.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return v.to_vec();
    }
    let s = if v.iter().find(|&&x| x != 0).map_or(false, |&x| x < 0) { -g } else { g };
    v.iter().map(|x| x / s).collect()
}

/// Row echelon form over Z restricted to the first `ncols` columns, using
/// unimodular row operations. Returns the number of pivot rows; those rows come
/// first.
fn echelon(m: &mut Vec<Row>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            // Bring the smallest nonzero entry of column c to row r.
            let Some(p) = (r..m.len()).filter(|&i| m[i][c] != 0).min_by_key(|&i| m[i][c].abs()) else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let q = Integer::div_floor(&m[i][c], &m[r][c]);
                    let src = m[r].clone();
                    axpy(&mut m[i], 1, &src, -q);
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] != 0 {
            pivots.push(c);
            r += 1;
        }
    }
    pivots
}

/// Hermite normal form of the lattice spanned by the rows: zero rows dropped,
/// positive pivots, entries above pivots reduced into `[0, pivot)`.
pub fn hnf(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return vec![];
    }
    let n = rows[0].len();
    let mut m = to_wide(rows);
    let piv = echelon(&mut m, n);
    m.truncate(piv.len());
    for (r, &c) in piv.iter().enumerate() {
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let q = Integer::div_floor(&m[i][c], &m[r][c]);
            if q != 0 {
                let src = m[r].clone();
                axpy(&mut m[i], 1, &src, -q);
            }
        }
    }
    to_narrow(m)
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    hnf(rows).len()
}

/// Basis of `{x in Z^n : A x = 0}` for the `k x n` matrix `A`; the basis is
/// saturated because it comes from a unimodular transform.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let k = a.len();
    let mut m: Vec<Row> = (0..n)
        .map(|j| {
            let mut r: Row = a.iter().map(|row| row[j] as i128).collect();
            r.extend((0..n).map(|i| (i == j) as i128));
            r
        })
        .collect();
    let piv = echelon(&mut m, k);
    let ker: Vec<Row> = m[piv.len()..].iter().map(|r| r[k..].to_vec()).collect();
    hnf(&to_narrow(ker))
}

/// Basis in HNF of `span_Q(rows) ∩ Z^n`.
pub fn saturate(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return vec![];
    }
    let n = rows[0].len();
    let perp = integer_kernel(rows, n);
    if perp.is_empty() {
        return identity(n);
    }
    integer_kernel(&perp, n)
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn cross3(a: &[i64], b: &[i64]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_redundant_rows() {
        let h = hnf(&[vec![2, 4], vec![1, 3], vec![3, 7]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn kernel_is_orthogonal_and_saturated() {
        let a = vec![vec![2, 4, 6]];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(dot(&a[0], v), 0);
        }
        assert_eq!(saturate(&k), k);
    }

    #[test]
    fn saturation_divides_out_index() {
        assert_eq!(saturate(&[vec![2, 2, 0]]), vec![vec![1, 1, 0]]);
        assert_eq!(saturate(&[vec![2, 0], vec![0, 2]]), identity(2));
    }

    #[test]
    fn primitive_sign_convention() {
        assert_eq!(primitive(&[0, -4, 6]), vec![0, 2, -3]);
    }
}
