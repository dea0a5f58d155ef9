//! Distinguished degree-one classes.

use num::{One, Zero};

use super::{ChowElement, ChowRing};
use crate::error::{Error, Result};
use crate::matroid::{elements, is_subset, Mask, Matroid};
use crate::rational::Q;

/// A degree-one class as coefficients on `x_F`, indexed like
/// `FlatLattice::proper`. The representative is not canonical: two values
/// describe the same class iff their difference lies in the linear relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    pub coeffs: Vec<Q>,
}

impl DivisorClass {
    pub fn zero(m: &Matroid) -> Self {
        DivisorClass {
            coeffs: vec![Q::zero(); m.flats().proper().len()],
        }
    }

    pub fn x(m: &Matroid, members: Mask) -> Result<Self> {
        let id = m
            .flats()
            .proper_index(members)
            .ok_or_else(|| Error::NotAFlat(elements(members)))?;
        let mut d = Self::zero(m);
        d.coeffs[id] = Q::one();
        Ok(d)
    }

    fn from_filter(m: &Matroid, f: impl Fn(Mask, usize) -> Option<Q>) -> Self {
        DivisorClass {
            coeffs: m
                .flats()
                .proper()
                .iter()
                .map(|fl| f(fl.members, fl.rank).unwrap_or_else(Q::zero))
                .collect(),
        }
    }

    /// `alpha = sum_{F ∋ 1} x_F`.
    pub fn alpha(m: &Matroid) -> Self {
        Self::from_filter(m, |s, _| (s & 1 == 1).then(Q::one))
    }

    /// `beta = sum_{F ∌ 1} x_F`.
    pub fn beta(m: &Matroid) -> Self {
        Self::from_filter(m, |s, _| (s & 1 == 0).then(Q::one))
    }

    /// `alpha_S = alpha - sum_{proper F ⊇ S} x_F`.
    pub fn alpha_s(m: &Matroid, s: Mask) -> Result<Self> {
        check_subset(m, s)?;
        let a = Self::alpha(m);
        let cut = Self::from_filter(m, |f, _| is_subset(s, f).then(Q::one));
        Ok(a.sub(&cut))
    }

    /// `beta_S = beta - sum_{proper nonempty F ⊆ E \ S} x_F`.
    pub fn beta_s(m: &Matroid, s: Mask) -> Result<Self> {
        check_subset(m, s)?;
        let b = Self::beta(m);
        let cut = Self::from_filter(m, |f, _| (f & s == 0).then(Q::one));
        Ok(b.sub(&cut))
    }

    /// `S_k = sum_{rk F = r - k} x_F` for `0 < k < r`.
    pub fn s_k(m: &Matroid, k: usize) -> Result<Self> {
        let r = m.rank();
        if k == 0 || k >= r {
            return Err(Error::Rank(format!("S_k needs 0 < k < {r}, got {k}")));
        }
        Ok(Self::from_filter(m, |_, rk| (rk == r - k).then(Q::one)))
    }

    pub fn add(&self, o: &Self) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

fn check_subset(m: &Matroid, s: Mask) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidArgument("subset S must be nonempty".into()));
    }
    if !is_subset(s, m.ground_mask()) {
        return Err(Error::InvalidArgument(format!(
            "subset {:?} is not contained in the ground set",
            elements(s)
        )));
    }
    Ok(())
}

impl ChowRing {
    /// The element of `A^1` represented by `d`.
    pub fn divisor(&self, d: &DivisorClass) -> Result<ChowElement> {
        let n = self.matroid.flats().proper().len();
        if d.coeffs.len() != n {
            return Err(Error::InvalidArgument(format!(
                "divisor has {} coefficients, expected {n}",
                d.coeffs.len()
            )));
        }
        let mut out = self.zero();
        for (id, c) in d.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let g = &self.graded[1];
            let idx = g.index[&vec![id as u16]];
            for (p, v) in &g.nf[idx as usize] {
                out.parts[1][*p as usize] += c * v;
            }
        }
        Ok(out)
    }

    pub fn alpha(&self) -> ChowElement {
        self.divisor(&DivisorClass::alpha(&self.matroid)).unwrap()
    }

    pub fn beta(&self) -> ChowElement {
        self.divisor(&DivisorClass::beta(&self.matroid)).unwrap()
    }

    pub fn alpha_s(&self, s: Mask) -> Result<ChowElement> {
        self.divisor(&DivisorClass::alpha_s(&self.matroid, s)?)
    }

    pub fn beta_s(&self, s: Mask) -> Result<ChowElement> {
        self.divisor(&DivisorClass::beta_s(&self.matroid, s)?)
    }

    pub fn s_k(&self, k: usize) -> Result<ChowElement> {
        self.divisor(&DivisorClass::s_k(&self.matroid, k)?)
    }

    /// Whether two divisor representatives define the same class.
    pub fn same_class(&self, a: &DivisorClass, b: &DivisorClass) -> Result<bool> {
        Ok(self.divisor(&a.sub(b))?.is_zero())
    }
}
