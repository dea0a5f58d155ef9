//! The graded Chow ring `A*(M)` over `Q`.
//!
//! Degree `d` is the span of chain-supported monomials in the `x_F`
//! (every other monomial lies in the incomparability ideal) modulo the
//! products of degree `d - 1` chain monomials with the linear forms
//! `sum_{F ∋ 1} x_F - sum_{F ∋ j} x_F`. Monomials are ordered
//! lexicographically by flat index (flats are indexed by `(rank, members)`);
//! the relation matrix is brought to reduced row echelon form with the
//! largest monomials as pivots, and the remaining standard monomials form
//! the basis. Every chain monomial has a precomputed normal form.

mod classes;
mod element;
mod maps;
mod recursive;
mod serial;

use std::collections::HashMap;

use rustc_hash::FxHashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::matroid::{is_subset, Flat, Matroid};
use crate::rational::{Coef, Small, Q};

pub use classes::DivisorClass;
pub use element::ChowElement;
pub use maps::Tensor;
pub use maps::{FlatSplit, TensorKey};
pub use recursive::{degree_recursive, key_valuative_degree, ChainMonomial};

/// Monomial as a nondecreasing list of proper-flat indices.
pub type Monomial = Vec<u16>;

type SparseRow = Vec<(u32, Q)>;

/// Default cap on the total number of chain monomials.
pub const DEFAULT_MONOMIAL_LIMIT: usize = 250_000;

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug)]
struct Graded {
    monomials: Vec<Monomial>,
    index: FxHashMap<Monomial, u32>,
    /// Normal form of each monomial over basis positions.
    nf: Vec<SparseRow>,
    /// The same rows on word-sized rationals, when they fit.
    nf_small: Option<Vec<Row<Small>>>,
    /// Monomial index of each basis element.
    basis: Vec<u32>,
}

#[derive(Debug)]
pub struct ChowRing {
    id: u64,
    matroid: Matroid,
    graded: Vec<Graded>,
}

impl ChowRing {
    pub fn build(m: &Matroid) -> Result<Self> {
        Self::build_with_limit(m, DEFAULT_MONOMIAL_LIMIT)
    }

    pub fn build_with_limit(m: &Matroid, limit: usize) -> Result<Self> {
        let r = m.rank();
        let lattice = m.flats();
        let proper = lattice.proper();
        if proper.len() > u16::MAX as usize {
            return Err(Error::Capacity {
                what: "proper flats",
                count: proper.len(),
                limit: u16::MAX as usize,
            });
        }

        let mut per_degree: Vec<Vec<Monomial>> = Vec::with_capacity(r);
        let mut total = 0usize;
        for d in 0..r {
            let mut mons = Vec::new();
            enumerate_chain_monomials(m, d, &mut mons, limit.saturating_sub(total))?;
            total += mons.len();
            mons.sort_unstable_by(|a, b| b.cmp(a));
            per_degree.push(mons);
        }

        let mut graded: Vec<Graded> = Vec::with_capacity(r);
        for d in 0..r {
            let monomials = std::mem::take(&mut per_degree[d]);
            let index: FxHashMap<Monomial, u32> = monomials
                .iter()
                .enumerate()
                .map(|(i, mo)| (mo.clone(), i as u32))
                .collect();
            let pivots = if d == 0 {
                HashMap::new()
            } else {
                eliminate(relations(m, &graded[d - 1].monomials, &index), monomials.len())
            };
            let basis: Vec<u32> = (0..monomials.len() as u32)
                .filter(|c| !pivots.contains_key(c))
                .collect();
            let pos: HashMap<u32, u32> = basis
                .iter()
                .enumerate()
                .map(|(p, &c)| (c, p as u32))
                .collect();
            let nf = (0..monomials.len() as u32)
                .map(|c| match pivots.get(&c) {
                    None => vec![(pos[&c], Q::one())],
                    Some(row) => row
                        .iter()
                        .filter(|(col, _)| *col != c)
                        .map(|(col, v)| (pos[col], -v.clone()))
                        .collect(),
                })
                .collect();
            graded.push(Graded {
                monomials,
                index,
                nf,
                nf_small: None,
                basis,
            });
        }

        let top = &mut graded[r - 1];
        if top.basis.len() != 1 {
            return Err(Error::Internal(format!(
                "top degree has dimension {}",
                top.basis.len()
            )));
        }
        // Re-base the top degree on the reference flag monomial so that the
        // single coordinate is the degree itself.
        let reference = top.index[&reference_flag_monomial(m)];
        let scale = top.nf[reference as usize]
            .first()
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Q::zero);
        if scale.is_zero() {
            return Err(Error::Internal("complete flag monomial vanishes".into()));
        }
        for row in top.nf.iter_mut() {
            for e in row.iter_mut() {
                e.1 = &e.1 / &scale;
            }
        }
        top.basis = vec![reference];
        for g in graded.iter_mut() {
            g.nf_small = g
                .nf
                .iter()
                .map(|row| row.iter().map(|(p, v)| Some((*p, Small::from_q(v)?))).collect())
                .collect();
        }
        Ok(ChowRing {
            id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed),
            matroid: m.clone(),
            graded,
        })
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn rank(&self) -> usize {
        self.matroid.rank()
    }

    /// Top degree `r - 1`.
    pub fn top_degree(&self) -> usize {
        self.rank() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.graded.iter().map(|g| g.basis.len()).collect()
    }

    pub fn dim(&self, d: usize) -> usize {
        self.graded.get(d).map_or(0, |g| g.basis.len())
    }

    pub fn monomial_count(&self) -> usize {
        self.graded.iter().map(|g| g.monomials.len()).sum()
    }

    /// All chain monomials of degree `d`.
    pub fn chain_monomials(&self, d: usize) -> &[Monomial] {
        self.graded.get(d).map_or(&[], |g| g.monomials.as_slice())
    }

    pub fn basis_monomial(&self, d: usize, p: usize) -> &Monomial {
        let g = &self.graded[d];
        &g.monomials[g.basis[p] as usize]
    }

    pub fn basis_monomials(&self, d: usize) -> Vec<&Monomial> {
        (0..self.dim(d)).map(|p| self.basis_monomial(d, p)).collect()
    }

    pub fn flat_of(&self, id: u16) -> &Flat {
        &self.matroid.flats().proper()[id as usize]
    }

    pub fn zero(&self) -> ChowElement {
        ChowElement::zero(self.id, &self.dims())
    }

    pub fn one(&self) -> ChowElement {
        let mut e = self.zero();
        e.parts[0][0] = Q::one();
        e
    }

    pub fn scalar(&self, c: Q) -> ChowElement {
        let mut e = self.zero();
        e.parts[0][0] = c;
        e
    }

    /// Normal form of a product of `x_F` (flat indices in any order).
    /// Products that are not supported on a chain vanish.
    pub fn monomial(&self, flats: &[u16]) -> ChowElement {
        let mut sorted = flats.to_vec();
        sorted.sort_unstable();
        let mut e = self.zero();
        if let Some((d, row)) = self.normal_form(&sorted) {
            for (p, v) in row {
                e.parts[d][*p as usize] = v.clone();
            }
        }
        e
    }

    fn normal_form(&self, sorted: &[u16]) -> Option<(usize, &SparseRow)> {
        let d = sorted.len();
        if d >= self.rank() || !is_chain(&self.matroid, sorted) {
            return None;
        }
        let g = &self.graded[d];
        g.index.get(sorted).map(|&i| (d, &g.nf[i as usize]))
    }

    /// Degree-one class `x_F` for a proper nonempty flat given by members.
    pub fn x(&self, members: crate::matroid::Mask) -> Result<ChowElement> {
        let id = self
            .matroid
            .flats()
            .proper_index(members)
            .ok_or_else(|| Error::NotAFlat(crate::matroid::elements(members)))?;
        Ok(self.monomial(&[id as u16]))
    }

    pub fn multiply(&self, a: &ChowElement, b: &ChowElement) -> Result<ChowElement> {
        self.check(a)?;
        self.check(b)?;
        if let Some(out) = self.multiply_with::<Small>(a, b) {
            return Ok(out);
        }
        Ok(self.multiply_with::<Q>(a, b).expect("big rationals do not overflow"))
    }

    /// `None` when `T` overflows.
    fn multiply_with<T: Coef + NfRows>(&self, a: &ChowElement, b: &ChowElement) -> Option<ChowElement> {
        let r = self.rank();
        let to_t = |e: &ChowElement| -> Option<Vec<Vec<(usize, T)>>> {
            e.parts
                .iter()
                .map(|p| {
                    p.iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(i, v)| Some((i, T::from_q(v)?)))
                        .collect()
                })
                .collect()
        };
        let (ta, tb) = (to_t(a)?, to_t(b)?);
        let mut acc: Vec<Vec<T>> = self.graded.iter().map(|g| vec![T::zero(); g.basis.len()]).collect();
        let mut scratch: Vec<u16> = Vec::with_capacity(r);
        for (i, ai) in ta.iter().enumerate() {
            for (p, av) in ai {
                let mp = self.basis_monomial(i, *p);
                for (j, bj) in tb.iter().enumerate().take(r - i) {
                    let d = i + j;
                    let g = &self.graded[d];
                    let rows = T::rows(g)?;
                    for (q, bv) in bj {
                        scratch.clear();
                        merge_into(mp, self.basis_monomial(j, *q), &mut scratch);
                        if !is_chain(&self.matroid, &scratch) {
                            continue;
                        }
                        let Some(&idx) = g.index.get(scratch.as_slice()) else { continue };
                        let c = av.mul_c(bv)?.neg_c()?;
                        let target = &mut acc[d];
                        for (pos, v) in &rows[idx as usize] {
                            let t = &mut target[*pos as usize];
                            *t = t.sub_mul(&c, v)?;
                        }
                    }
                }
            }
        }
        let mut out = self.zero();
        for (d, part) in acc.into_iter().enumerate() {
            for (x, v) in out.parts[d].iter_mut().zip(part) {
                *x = v.into_q();
            }
        }
        Some(out)
    }

    pub fn pow(&self, a: &ChowElement, k: usize) -> Result<ChowElement> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// `deg_M` on a class concentrated in degree `r - 1`.
    pub fn degree(&self, a: &ChowElement) -> Result<Q> {
        self.check(a)?;
        let top = self.top_degree();
        if let Some(d) = a.parts.iter().enumerate().position(|(d, p)| d != top && p.iter().any(|v| !v.is_zero())) {
            return Err(Error::InvalidArgument(format!(
                "degree map needs a class of degree {top}, found a component in degree {d}"
            )));
        }
        Ok(self.degree_of_top(a))
    }

    /// `deg_M` applied to the top-degree component, ignoring the rest.
    pub fn degree_of_top(&self, a: &ChowElement) -> Q {
        a.parts[self.top_degree()][0].clone()
    }

    /// Gram matrix of `A^d x A^{r-1-d} -> Q` over the chosen bases.
    pub fn pairing_matrix(&self, d: usize) -> Result<Vec<Vec<Q>>> {
        let top = self.top_degree();
        if d > top {
            return Err(Error::InvalidArgument(format!("degree {d} exceeds {top}")));
        }
        let left = self.basis_monomials(d);
        let right = self.basis_monomials(top - d);
        Ok(left
            .iter()
            .map(|a| {
                right
                    .iter()
                    .map(|b| {
                        let mut m = Vec::new();
                        merge_into(a, b, &mut m);
                        match self.normal_form(&m) {
                            Some((d, row)) if d == top => row.first().map(|e| e.1.clone()).unwrap_or_else(Q::zero),
                            _ => Q::zero(),
                        }
                    })
                    .collect()
            })
            .collect())
    }

    /// Checks that every squarefree complete-flag monomial has degree 1.
    pub fn check_degree_normalization(&self) -> Result<()> {
        for flag in self.matroid.complete_flags() {
            let ids: Vec<u16> = flag
                .flats
                .iter()
                .map(|f| self.matroid.flats().proper_index(f.members).unwrap() as u16)
                .collect();
            let deg = self.degree(&self.monomial(&ids))?;
            if !deg.is_one() {
                return Err(Error::Internal(format!(
                    "complete flag {:?} has degree {deg}",
                    flag.flats.iter().map(|f| f.to_string()).collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub(crate) fn check(&self, a: &ChowElement) -> Result<()> {
        if a.ring != self.id {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }
}

fn merge_into(a: &[u16], b: &[u16], out: &mut Vec<u16>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Sorted flat indices form a chain (with repetition) iff consecutive
/// distinct flats are nested.
fn is_chain(m: &Matroid, sorted: &[u16]) -> bool {
    let proper = m.flats().proper();
    sorted.windows(2).all(|w| {
        w[0] == w[1] || is_subset(proper[w[0] as usize].members, proper[w[1] as usize].members)
    })
}

fn enumerate_chain_monomials(m: &Matroid, d: usize, out: &mut Vec<Monomial>, budget: usize) -> Result<()> {
    fn rec(
        m: &Matroid,
        last: Option<usize>,
        remaining: usize,
        cur: &mut Vec<u16>,
        out: &mut Vec<Monomial>,
        budget: usize,
    ) -> Result<()> {
        if remaining == 0 {
            if out.len() >= budget {
                return Err(Error::Capacity {
                    what: "chain monomials",
                    count: out.len() + 1,
                    limit: budget,
                });
            }
            out.push(cur.clone());
            return Ok(());
        }
        let lattice = m.flats();
        let candidates: Vec<usize> = match last {
            None => (0..lattice.proper().len()).collect(),
            Some(l) => lattice.above(l).to_vec(),
        };
        for next in candidates {
            for e in 1..=remaining {
                cur.extend(std::iter::repeat_n(next as u16, e));
                rec(m, Some(next), remaining - e, cur, out, budget)?;
                cur.truncate(cur.len() - e);
            }
        }
        Ok(())
    }
    rec(m, None, d, &mut Vec::new(), out, budget)
}

/// Products of every degree `d - 1` chain monomial with the linear forms
/// `L_j = sum_{F ∋ 1} x_F - sum_{F ∋ j} x_F`, dropping non-chain terms.
fn relations(m: &Matroid, lower: &[Monomial], index: &FxHashMap<Monomial, u32>) -> Vec<Row<i64>> {
    let proper = m.flats().proper();
    let mut rows = Vec::new();
    let mut scratch = Vec::new();
    for mono in lower {
        // flats insertable into the chain of `mono`
        let insertable: Vec<u16> = (0..proper.len() as u16)
            .filter(|&f| {
                mono.iter().all(|&g| {
                    g == f || proper[g as usize].comparable(&proper[f as usize])
                })
            })
            .collect();
        for j in 1..m.n() {
            let mut row: std::collections::BTreeMap<u32, i64> = Default::default();
            for &f in &insertable {
                let members = proper[f as usize].members;
                let coeff = (members & 1) as i64 - (members >> j & 1) as i64;
                if coeff == 0 {
                    continue;
                }
                scratch.clear();
                merge_into(mono, &[f], &mut scratch);
                if let Some(&c) = index.get(&scratch) {
                    *row.entry(c).or_insert(0) += coeff;
                }
            }
            let row: Row<i64> = row.into_iter().filter(|(_, v)| *v != 0).collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    rows
}

type Row<T> = Vec<(u32, T)>;

/// Normal-form rows in a given coefficient type.
trait NfRows: Sized {
    fn rows(g: &Graded) -> Option<&[Row<Self>]>;
}

impl NfRows for Small {
    fn rows(g: &Graded) -> Option<&[Row<Small>]> {
        g.nf_small.as_deref()
    }
}

impl NfRows for Q {
    fn rows(g: &Graded) -> Option<&[Row<Q>]> {
        Some(&g.nf)
    }
}

/// `row - c * pivot` on sorted sparse rows.
fn axpy<T: Coef>(row: &Row<T>, c: &T, pivot: &Row<T>) -> Option<Row<T>> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        if j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i >= row.len() || pivot[j].0 < row[i].0 {
            out.push((pivot[j].0, T::zero().sub_mul(c, &pivot[j].1)?));
            j += 1;
        } else {
            let v = row[i].1.sub_mul(c, &pivot[j].1)?;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Reduced row echelon form; the pivot of each row is its smallest column
/// index (largest monomial). Returns `None` on coefficient overflow.
fn eliminate_with<T: Coef>(rows: &[Row<i64>], ncols: usize) -> Option<Vec<Option<Row<T>>>> {
    let mut pivots: Vec<Option<Row<T>>> = vec![None; ncols];
    for raw in rows {
        let mut row: Row<T> = raw.iter().map(|(c, v)| (*c, T::from_i64(*v))).collect();
        while let Some((lead, lv)) = row.first().cloned() {
            match &pivots[lead as usize] {
                Some(p) => row = axpy(&row, &lv, p)?,
                None => {
                    let inv = lv.inv()?;
                    for e in row.iter_mut() {
                        e.1 = e.1.mul_c(&inv)?;
                    }
                    pivots[lead as usize] = Some(row);
                    break;
                }
            }
        }
    }
    // Back substitution from the smallest monomial upwards: every pivot row
    // already processed contains no other pivot column.
    let mut acc: Vec<T> = vec![T::zero(); ncols];
    let mut touched: Vec<u32> = Vec::new();
    let mut seen = vec![false; ncols];
    for c in (0..ncols).rev() {
        let Some(row) = pivots[c].take() else { continue };
        for (col, v) in row.iter().skip(1) {
            match &pivots[*col as usize] {
                Some(p) => {
                    for (pc, pv) in p.iter().skip(1) {
                        let k = *pc as usize;
                        acc[k] = acc[k].sub_mul(v, pv)?;
                        if !seen[k] {
                            seen[k] = true;
                            touched.push(*pc);
                        }
                    }
                }
                None => {
                    let k = *col as usize;
                    acc[k] = acc[k].sub_mul(&T::one().neg_c()?, v)?;
                    if !seen[k] {
                        seen[k] = true;
                        touched.push(*col);
                    }
                }
            }
        }
        touched.sort_unstable();
        let mut out: Row<T> = vec![(c as u32, T::one())];
        for &k in &touched {
            let v = std::mem::replace(&mut acc[k as usize], T::zero());
            seen[k as usize] = false;
            if !v.is_zero() {
                out.push((k, v));
            }
        }
        touched.clear();
        pivots[c] = Some(out);
    }
    Some(pivots)
}

fn eliminate(rows: Vec<Row<i64>>, ncols: usize) -> HashMap<u32, SparseRow> {
    fn collect<T: Coef>(p: Vec<Option<Row<T>>>) -> HashMap<u32, SparseRow> {
        p.into_iter()
            .enumerate()
            .filter_map(|(c, r)| {
                r.map(|r| (c as u32, r.into_iter().map(|(k, v)| (k, v.into_q())).collect()))
            })
            .collect()
    }
    match eliminate_with::<Small>(&rows, ncols) {
        Some(p) => collect(p),
        None => collect(eliminate_with::<Q>(&rows, ncols).expect("exact elimination")),
    }
}

/// Monomial of the lexicographically smallest complete flag.
fn reference_flag_monomial(m: &Matroid) -> Monomial {
    let lattice = m.flats();
    let mut out: Monomial = Vec::new();
    let mut last: Option<usize> = None;
    for k in 1..m.rank() {
        let next = (0..lattice.proper().len())
            .find(|&i| {
                lattice.proper()[i].rank == k && last.is_none_or(|l| lattice.above(l).contains(&i))
            })
            .expect("every flat lies in a complete flag");
        out.push(next as u16);
        last = Some(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn ring(r: usize, n: usize) -> ChowRing {
        ChowRing::build(&Matroid::uniform(r, n).unwrap()).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(ring(3, 4).dims(), vec![1, 7, 1]);
        assert_eq!(ring(2, 3).dims(), vec![1, 1]);
        assert_eq!(ring(1, 3).dims(), vec![1]);
        // Eulerian numbers for the permutohedral variety
        assert_eq!(ring(4, 4).dims(), vec![1, 11, 11, 1]);
    }

    #[test]
    fn degree_normalization() {
        for (r, n) in [(2, 3), (3, 4), (3, 5), (4, 4), (4, 5)] {
            ring(r, n).check_degree_normalization().unwrap();
        }
    }

    #[test]
    fn incomparable_product_vanishes() {
        let r = ring(3, 4);
        let a = r.x(0b0011).unwrap();
        let b = r.x(0b1100).unwrap();
        assert!(r.multiply(&a, &b).unwrap().is_zero());
        let one = r.one();
        assert_eq!(r.multiply(&one, &a).unwrap(), a);
    }

    #[test]
    fn degree_rejects_lower_degree() {
        let r = ring(3, 4);
        assert!(r.degree(&r.one()).is_err());
        let sq = r.multiply(&r.x(0b0011).unwrap(), &r.x(0b0011).unwrap()).unwrap();
        assert_eq!(r.degree(&sq).unwrap(), q(-1));
    }

    #[test]
    fn capacity_limit() {
        let m = Matroid::uniform(3, 6).unwrap();
        assert!(matches!(
            ChowRing::build_with_limit(&m, 10),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn pairing_matrices() {
        let r = ring(3, 4);
        assert_eq!(r.pairing_matrix(0).unwrap(), vec![vec![q(1)]]);
        let g1 = r.pairing_matrix(1).unwrap();
        assert_eq!(g1.len(), 7);
        assert_eq!(crate::linalg::rank(&g1), 7);
    }
}
