//! Smith normal form over the integers, with the unimodular transforms kept,
//! and an exact solver for linear systems modulo 1.
//!
//! Entries are `BigInt` throughout: the elimination can grow intermediate
//! values past machine range even for small inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `p * a * q = s` with `p`, `q` unimodular and `s` diagonal, the diagonal
/// entries nonnegative with each dividing the next.
pub struct Snf {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal of `s`, length `min(rows, cols)`; trailing entries may be 0.
    pub diag: Vec<BigInt>,
    pub p: Vec<Vec<BigInt>>,
    pub q: Vec<Vec<BigInt>>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Snf {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut p = identity(rows);
    let mut q = identity(cols);
    let steps = rows.min(cols);

    let mut t = 0;
    while t < steps {
        let Some((pi, pj)) = min_nonzero(&m, t) else {
            break;
        };
        swap_rows(&mut m, &mut p, t, pi);
        swap_cols(&mut m, &mut q, t, pj);
        loop {
            // Clear column t below the pivot.
            let mut dirty = false;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let f = floored_quot(&m[i][t], &m[t][t]);
                    row_sub(&mut m, &mut p, i, t, &f);
                    if !m[i][t].is_zero() {
                        // Remainder is smaller than the pivot; promote it.
                        swap_rows(&mut m, &mut p, t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let f = floored_quot(&m[t][j], &m[t][t]);
                    col_sub(&mut m, &mut q, j, t, &f);
                    if !m[t][j].is_zero() {
                        swap_cols(&mut m, &mut q, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty
                && (t + 1..rows).all(|i| m[i][t].is_zero())
                && (t + 1..cols).all(|j| m[t][j].is_zero())
            {
                break;
            }
        }
        // Divisibility: fold any entry the pivot does not divide into row t.
        let mut fold = None;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&m[i][j] % &m[t][t]).is_zero() {
                    fold = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = fold {
            let one = BigInt::from(-1);
            row_sub(&mut m, &mut p, t, i, &one); // row_t += row_i
            continue; // redo this step
        }
        t += 1;
    }

    for t in 0..steps {
        if m[t][t].is_negative() {
            for j in 0..cols {
                m[t][j] = -std::mem::take(&mut m[t][j]);
            }
            for j in 0..rows {
                p[t][j] = -std::mem::take(&mut p[t][j]);
            }
        }
    }
    let diag = (0..steps).map(|i| m[i][i].clone()).collect();
    Snf { rows, cols, diag, p, q }
}

/// Solves `a x = b (mod 1)` for rational `x`, i.e. finds `x` with
/// `a x - b` integral, or reports that none exists.
pub fn solve_mod1(a: &[Vec<BigInt>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let snf = smith_normal_form(a);
    debug_assert_eq!(b.len(), snf.rows);
    // u = p * b
    let u: Vec<BigRational> = (0..snf.rows)
        .map(|i| {
            (0..snf.rows)
                .map(|j| BigRational::from(snf.p[i][j].clone()) * &b[j])
                .sum()
        })
        .collect();
    let mut w = vec![BigRational::zero(); snf.cols];
    for i in 0..snf.rows {
        let d = if i < snf.diag.len() { snf.diag[i].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !u[i].is_integer() {
                return None;
            }
        } else if i < snf.cols {
            w[i] = &u[i] / BigRational::from(d);
        }
    }
    // x = q * w
    let x: Vec<BigRational> = (0..snf.cols)
        .map(|i| {
            (0..snf.cols)
                .map(|j| BigRational::from(snf.q[i][j].clone()) * &w[j])
                .sum()
        })
        .collect();
    Some(x)
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn min_nonzero(m: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.len() {
        for j in t..m[i].len() {
            if m[i][j].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if m[i][j].abs() < m[bi][bj].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

fn swap_rows(m: &mut [Vec<BigInt>], p: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        m.swap(a, b);
        p.swap(a, b);
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], q: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
        for row in q.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// `row_a -= f * row_b`, mirrored on `p`.
fn row_sub(m: &mut [Vec<BigInt>], p: &mut [Vec<BigInt>], a: usize, b: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for j in 0..m[a].len() {
        let d = f * &m[b][j];
        m[a][j] -= d;
    }
    for j in 0..p[a].len() {
        let d = f * &p[b][j];
        p[a][j] -= d;
    }
}

/// `col_a -= f * col_b`, mirrored on `q`.
fn col_sub(m: &mut [Vec<BigInt>], q: &mut [Vec<BigInt>], a: usize, b: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let d = f * &row[b];
        row[a] -= d;
    }
    for row in q.iter_mut() {
        let d = f * &row[b];
        row[a] -= d;
    }
}

fn floored_quot(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.div_floor(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = a.len();
        let k = if n == 0 { 0 } else { a[0].len() };
        let m = if k == 0 { 0 } else { b[0].len() };
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn check(a: &[Vec<BigInt>], expect_diag: &[i64]) {
        let snf = smith_normal_form(a);
        let pa = matmul(&snf.p, a);
        let s = matmul(&pa, &snf.q);
        for i in 0..snf.rows {
            for j in 0..snf.cols {
                let want = if i == j && i < snf.diag.len() { snf.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(s[i][j], want, "not diagonal at ({i},{j})");
            }
        }
        let got: Vec<BigInt> = snf.diag.clone();
        let want: Vec<BigInt> = expect_diag.iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(got, want);
        // Successive divisibility.
        for w in snf.diag.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn known_forms() {
        check(&mat(&[&[2, 4], &[6, 8]]), &[2, 4]);
        check(&mat(&[&[1, 0], &[0, 1]]), &[1, 1]);
        check(&mat(&[&[0, 0], &[0, 0]]), &[0, 0]);
        check(&mat(&[&[2, 4, 4]]), &[2]);
        check(&mat(&[&[6], &[10], &[15]]), &[1]);
        check(&mat(&[&[2, 0], &[0, 3]]), &[1, 6]);
        check(&mat(&[&[-3]]), &[3]);
    }

    #[test]
    fn solve_exact_and_mod1() {
        // 2x = 1 has the mod-1 solution x = 1/2.
        let a = mat(&[&[2]]);
        let b = vec![BigRational::new(BigInt::from(1), BigInt::from(1))];
        let x = solve_mod1(&a, &b).unwrap();
        assert_eq!(x[0], BigRational::new(BigInt::from(1), BigInt::from(2)));
        // Inconsistent zero row: 0 x = 1/3 has no solution mod 1.
        let a = mat(&[&[0]]);
        let b = vec![BigRational::new(BigInt::from(1), BigInt::from(3))];
        assert!(solve_mod1(&a, &b).is_none());
        // But 0 x = 2 (an integer) is fine mod 1.
        let b = vec![BigRational::from(BigInt::from(2))];
        assert!(solve_mod1(&a, &b).is_some());
    }

    #[test]
    fn solve_rectangular() {
        // x + y = 1/4, x - y = 1/4 => x = 1/4, y = 0 works mod 1.
        let a = mat(&[&[1, 1], &[1, -1]]);
        let b = vec![
            BigRational::new(BigInt::from(1), BigInt::from(4)),
            BigRational::new(BigInt::from(1), BigInt::from(4)),
        ];
        let x = solve_mod1(&a, &b).unwrap();
        // Verify the residual is integral.
        for (row, rhs) in a.iter().zip(&b) {
            let lhs: BigRational = row
                .iter()
                .zip(&x)
                .map(|(c, xi)| BigRational::from(c.clone()) * xi)
                .sum();
            assert!((lhs - rhs).is_integer());
        }
    }
}
