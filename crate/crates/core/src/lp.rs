//! Exact feasibility of linear systems: a dense two-phase simplex (phase one
//! only) with Bland's rule, run on word-sized rationals and repeated with
//! big rationals if anything overflows.

use num::{Signed, Zero};

use crate::rational::{Coef, Small, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Relation,
    pub rhs: Q,
}

/// `find x` subject to the constraints, with `x_j >= 0` unless `free[j]`.
#[derive(Debug, Clone, Default)]
pub struct Feasibility {
    pub free: Vec<bool>,
    pub constraints: Vec<Constraint>,
}

impl Feasibility {
    pub fn new(free: Vec<bool>) -> Self {
        Feasibility {
            free,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<Q>, rel: Relation, rhs: Q) {
        debug_assert_eq!(coeffs.len(), self.free.len());
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// A feasible point, or `None` if the system is infeasible.
    pub fn solve(&self) -> Option<Vec<Q>> {
        match solve_with::<Small>(self) {
            Some(res) => res,
            None => solve_with::<Q>(self).expect("big rationals do not overflow"),
        }
    }
}

/// Outer `None` = overflow; inner `None` = infeasible.
fn solve_with<T: Coef>(p: &Feasibility) -> Option<Option<Vec<Q>>> {
    let k = p.free.len();
    // column layout: one or two columns per variable, then one slack per inequality
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(k);
    let mut ncols = 0;
    for &f in &p.free {
        if f {
            col_of.push((ncols, Some(ncols + 1)));
            ncols += 2;
        } else {
            col_of.push((ncols, None));
            ncols += 1;
        }
    }
    let n_ineq = p.constraints.iter().filter(|c| c.rel != Relation::Eq).count();
    let structural = ncols + n_ineq;
    let m = p.constraints.len();
    let width = structural + m + 1;
    let mut tab: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut slack = ncols;
    for (i, c) in p.constraints.iter().enumerate() {
        let mut row = vec![T::zero(); width];
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let v = T::from_q(a)?;
            let (pos, neg) = col_of[j];
            row[pos] = v.clone();
            if let Some(nc) = neg {
                row[nc] = v.neg_c()?;
            }
        }
        match c.rel {
            Relation::Eq => {}
            Relation::Ge => {
                row[slack] = T::one().neg_c()?;
                slack += 1;
            }
            Relation::Le => {
                row[slack] = T::one();
                slack += 1;
            }
        }
        row[width - 1] = T::from_q(&c.rhs)?;
        if c.rhs.is_negative() {
            for v in row.iter_mut() {
                *v = v.neg_c()?;
            }
        }
        row[structural + i] = T::one();
        tab.push(row);
    }
    let mut basis: Vec<usize> = (structural..structural + m).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost = vec![T::zero(); width];
    for row in &tab {
        for j in 0..structural {
            cost[j] = cost[j].sub_mul(&T::one(), &row[j])?;
        }
        cost[width - 1] = cost[width - 1].sub_mul(&T::one(), &row[width - 1])?;
    }
    loop {
        let Some(enter) = (0..structural + m).find(|&j| cost[j] < T::zero()) else { break };
        let mut leave: Option<usize> = None;
        let mut best: Option<T> = None;
        for i in 0..m {
            if tab[i][enter] > T::zero() {
                let ratio = tab[i][width - 1].div_c(&tab[i][enter])?;
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // unbounded direction cannot occur for a phase-one objective bounded below
            unreachable!("phase-one objective is bounded");
        };
        let piv = tab[r][enter].inv()?;
        for v in tab[r].iter_mut() {
            *v = v.mul_c(&piv)?;
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.sub_mul(&f, pv)?;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.sub_mul(&f, pv)?;
                }
            }
        }
        basis[r] = enter;
    }
    if !cost[width - 1].is_zero() {
        return Some(None);
    }
    let mut values = vec![T::zero(); structural + m];
    for (i, &b) in basis.iter().enumerate() {
        values[b] = tab[i][width - 1].clone();
    }
    let x = col_of
        .iter()
        .map(|&(pos, neg)| {
            let v = values[pos].clone().into_q();
            match neg {
                Some(nc) => v - values[nc].clone().into_q(),
                None => v,
            }
        })
        .collect();
    Some(Some(x))
}
