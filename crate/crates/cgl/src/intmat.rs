//! Integer matrix algorithms: Smith normal form with transform tracking,
//! and the lattice operations built on it (saturation, kernel, Diophantine
//! solving).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let m = a.len();
    let p = if m > 0 { a[0].len() } else { 0 };
    let n = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = vec![vec![BigInt::zero(); n]; m];
    for i in 0..m {
        for k in 0..p {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &a[i][k] * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(c, x)| c * x).sum())
        .collect()
}

/// `U A V = diag(d)`, with `U`, `V` unimodular and `d_1 | d_2 | ...`.
/// `vinv` is maintained alongside `V` so that `vinv = V^{-1}` exactly.
pub struct Smith {
    pub d: Vec<BigInt>,
    pub rank: usize,
    pub u: Mat,
    pub v: Mat,
    pub vinv: Mat,
}

pub fn smith(a: &Mat) -> Smith {
    let m = a.len();
    let n = if m > 0 { a[0].len() } else { 0 };
    let mut a = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut vinv = identity(n);

    // elementary operations, applied consistently to the transforms
    fn row_swap(a: &mut Mat, u: &mut Mat, i: usize, j: usize) {
        a.swap(i, j);
        u.swap(i, j);
    }
    fn row_add(a: &mut Mat, u: &mut Mat, i: usize, j: usize, c: &BigInt) {
        // row_i += c * row_j
        for t in 0..a[0].len() {
            let x = c * &a[j][t];
            a[i][t] += x;
        }
        for t in 0..u[0].len() {
            let x = c * &u[j][t];
            u[i][t] += x;
        }
    }
    fn col_swap(a: &mut Mat, v: &mut Mat, vinv: &mut Mat, i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vinv.swap(i, j);
    }
    fn col_add(a: &mut Mat, v: &mut Mat, vinv: &mut Mat, i: usize, j: usize, c: &BigInt) {
        // col_i += c * col_j  =>  vinv row_j -= c * row_i
        for row in a.iter_mut() {
            let x = c * &row[j];
            row[i] += x;
        }
        for row in v.iter_mut() {
            let x = c * &row[j];
            row[i] += x;
        }
        for t in 0..vinv[0].len() {
            let x = c * &vinv[i][t];
            vinv[j][t] -= x;
        }
    }
    fn col_neg(a: &mut Mat, v: &mut Mat, vinv: &mut Mat, i: usize) {
        for row in a.iter_mut() {
            row[i] = -row[i].clone();
        }
        for row in v.iter_mut() {
            row[i] = -row[i].clone();
        }
        for t in 0..vinv[0].len() {
            vinv[i][t] = -vinv[i][t].clone();
        }
    }

    let mut t = 0;
    while t < m.min(n) {
        // locate a pivot of minimal absolute value in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if a[i][j].is_zero() {
                    continue;
                }
                match &pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if a[i][j].abs() < a[*pi][*pj].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap(&mut a, &mut u, t, pi);
        col_swap(&mut a, &mut v, &mut vinv, t, pj);
        // clear row and column t; restart elimination if a remainder survives
        loop {
            let mut dirty = false;
            for i in (t + 1)..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_add(&mut a, &mut u, i, t, &-q);
                if !a[i][t].is_zero() {
                    row_swap(&mut a, &mut u, t, i);
                    dirty = true;
                }
            }
            for j in (t + 1)..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_add(&mut a, &mut v, &mut vinv, j, t, &-q);
                if !a[t][j].is_zero() {
                    col_swap(&mut a, &mut v, &mut vinv, t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // divisibility: fold in any entry the pivot misses, and redo
        let mut redo = false;
        'scan: for i in (t + 1)..m {
            for j in (t + 1)..n {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    row_add(&mut a, &mut u, t, i, &BigInt::from(1));
                    redo = true;
                    break 'scan;
                }
            }
        }
        if redo {
            continue;
        }
        if a[t][t].is_negative() {
            col_neg(&mut a, &mut v, &mut vinv, t);
        }
        t += 1;
    }
    let d: Vec<BigInt> = (0..m.min(n)).map(|i| a[i][i].clone()).collect();
    let rank = d.iter().take_while(|x| !x.is_zero()).count();
    Smith { d, rank, u, v, vinv }
}

/// Basis of the saturation of the row lattice of `a` in `Z^n`:
/// the first `rank` rows of `V^{-1}` from the Smith form.
pub fn saturation_basis(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    let s = smith(a);
    s.vinv[..s.rank].to_vec()
}

/// Basis of the integer kernel `{x : a x = 0}`:
/// the last `n - rank` columns of `V`.
pub fn kernel_basis(a: &Mat, n: usize) -> Mat {
    if a.is_empty() {
        return identity(n);
    }
    let s = smith(a);
    (s.rank..n)
        .map(|j| (0..n).map(|i| s.v[i][j].clone()).collect())
        .collect()
}

/// One integer solution of `a x = b`, if any.
pub fn solve(a: &Mat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let m = a.len();
    let n = if m > 0 { a[0].len() } else { 0 };
    if m == 0 {
        return Some(vec![BigInt::zero(); n]);
    }
    let s = smith(a);
    let ub = mat_vec(&s.u, b);
    let mut y = vec![BigInt::zero(); n];
    for (i, ubi) in ub.iter().enumerate() {
        if i < s.rank {
            let (q, r) = ubi.div_rem(&s.d[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    Some(mat_vec(&s.v, &y))
}

/// True if the integer vector `x` lies in the row lattice of `a`.
pub fn row_lattice_contains(a: &Mat, x: &[BigInt]) -> bool {
    // x in rowspace(a) over Z  <=>  a^T y = x solvable
    let m = a.len();
    if m == 0 {
        return x.iter().all(|c| c.is_zero());
    }
    let n = a[0].len();
    let at: Mat = (0..n).map(|j| (0..m).map(|i| a[i][j].clone()).collect()).collect();
    solve(&at, x).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &Mat) {
        let m = a.len();
        let n = a[0].len();
        let s = smith(a);
        // U A V is the stated diagonal
        let uav = mat_mul(&mat_mul(&s.u, a), &s.v);
        for i in 0..m {
            for j in 0..n {
                let want = if i == j && i < s.d.len() { s.d[i].clone() } else { BigInt::zero() };
                assert_eq!(uav[i][j], want, "UAV mismatch at ({}, {})", i, j);
            }
        }
        // divisibility chain
        for i in 1..s.rank {
            assert!((&s.d[i] % &s.d[i - 1]).is_zero());
        }
        // vinv really inverts v
        assert_eq!(mat_mul(&s.v, &s.vinv), identity(n));
    }

    #[test]
    fn smith_small() {
        check_smith(&from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]));
        check_smith(&from_i64(&[vec![1, 0], vec![0, 1]]));
        check_smith(&from_i64(&[vec![0, 0], vec![0, 0]]));
        check_smith(&from_i64(&[vec![6, 10, 15]]));
        check_smith(&from_i64(&[vec![2, 0], vec![0, 3], vec![5, 7]]));
    }

    #[test]
    fn smith_known_invariants() {
        // determinantal divisors: gcd of entries 2, gcd of 2x2 minors 4,
        // det 624, so invariant factors 2, 4/2, 624/4
        let s = smith(&from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]));
        let d: Vec<i64> = s.d.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![2, 2, 156]);
    }

    #[test]
    fn saturation_of_scaled_row() {
        // lattice spanned by (2, -2) saturates to span (1, -1)
        let sat = saturation_basis(&from_i64(&[vec![2, -2]]));
        assert_eq!(sat.len(), 1);
        let r = &sat[0];
        assert!(r[0].abs() == BigInt::from(1) && r[1] == -r[0].clone());
        assert!(row_lattice_contains(&sat, &[BigInt::from(1), BigInt::from(-1)]));
        assert!(!row_lattice_contains(&sat, &[BigInt::from(1), BigInt::from(0)]));
    }

    #[test]
    fn kernel_and_solve() {
        let a = from_i64(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = kernel_basis(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(|c| c.is_zero()));
        }
        let b = vec![BigInt::from(6), BigInt::from(12)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(mat_vec(&a, &x), b);
        // 1*x + 2*y + 3*z = 1 has integer solutions; = impossible rhs on dependent row
        assert!(solve(&a, &[BigInt::from(1), BigInt::from(2)]).is_some());
        assert!(solve(&a, &[BigInt::from(1), BigInt::from(1)]).is_none());
    }
}
