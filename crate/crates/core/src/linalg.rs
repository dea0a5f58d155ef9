//! Dense exact linear algebra over `Q`.

use num::{One, Zero};

use crate::rational::Q;

/// Row echelon form in place; returns pivot columns.
fn echelon(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (src, dst) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= &f * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut a = m.to_vec();
    echelon(&mut a).len()
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let piv = echelon(&mut a);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `x^T m = b` (row combination), i.e. `m^T x = b`.
pub fn solve_left(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    // augmented [m^T | b]
    let rows = m.first().map_or(0, Vec::len);
    let n = m.len();
    let mut a: Vec<Vec<Q>> = (0..rows)
        .map(|j| {
            let mut r: Vec<Q> = (0..n).map(|i| m[i][j].clone()).collect();
            r.push(b[j].clone());
            r
        })
        .collect();
    let piv = echelon(&mut a);
    if piv.contains(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = a[r][n].clone();
    }
    Some(x)
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}
