//! K-classes through their Chern characters in `A*(M) ⊗ Q`.
//!
//! The Chern character is a ring isomorphism over `Q`, so a class is just
//! `ch`; line bundles enter as `e^D`, and the exceptional isomorphism and
//! Hirzebruch–Riemann–Roch give two independent Euler characteristics.

mod euler;
mod tangent;
mod todd;

use num::{One, Zero};

use crate::chow::{ChowElement, ChowRing};
use crate::error::{Error, Result};
use crate::rational::{factorial, Q};
use crate::series::Series;

pub use euler::{AlphaExpression, KTheory};
pub use tangent::{canonical_class, chern_qm, chern_tm, chern_tm_recursive, tangent_polynomial, Poly};
pub use todd::{todd, todd_series_coefficient, todd_tm, todd_tm_product};

/// Virtual rank and total Chern class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernData {
    pub rank: i64,
    pub total: ChowElement,
}

impl ChernData {
    pub fn c(&self, k: usize) -> ChowElement {
        self.total.homogeneous_part(k)
    }
}

/// A class of `K(M) ⊗ Q`, stored as its Chern character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KClass {
    pub ch: ChowElement,
}

impl KClass {
    pub fn rank(&self) -> Q {
        self.ch.component(0)[0].clone()
    }

    pub fn trivial(ring: &ChowRing, rank: i64) -> KClass {
        KClass {
            ch: ring.scalar(Q::from_integer(rank.into())),
        }
    }

    /// Line bundle with first Chern class `d`: `ch = e^d`.
    pub fn line(ring: &ChowRing, d: &ChowElement) -> Result<KClass> {
        Ok(KClass {
            ch: apply_series(ring, &Series::exponential(ring.rank()), d)?,
        })
    }

    pub fn add(&self, o: &KClass) -> KClass {
        KClass { ch: &self.ch + &o.ch }
    }

    pub fn sub(&self, o: &KClass) -> KClass {
        KClass { ch: &self.ch - &o.ch }
    }

    pub fn tensor(&self, ring: &ChowRing, o: &KClass) -> Result<KClass> {
        Ok(KClass {
            ch: ring.multiply(&self.ch, &o.ch)?,
        })
    }

    /// Negates odd-degree parts of `ch`.
    pub fn dual(&self) -> KClass {
        let mut ch = self.ch.clone();
        for (d, p) in ch.parts.iter_mut().enumerate() {
            if d % 2 == 1 {
                p.iter_mut().for_each(|v| *v = -v.clone());
            }
        }
        KClass { ch }
    }

    /// Adams operation: degree-`i` part of `ch` scaled by `j^i`.
    pub fn adams(&self, j: u32) -> Result<KClass> {
        if j == 0 {
            return Err(Error::InvalidArgument("Adams operations need j >= 1".into()));
        }
        let mut ch = self.ch.clone();
        let mut f = Q::one();
        let jq = Q::from_integer(j.into());
        for p in ch.parts.iter_mut() {
            p.iter_mut().for_each(|v| *v = &*v * &f);
            f *= &jq;
        }
        Ok(KClass { ch })
    }

    /// `lambda^0 .. lambda^p` from `k lambda^k = sum_j (-1)^{j-1} lambda^{k-j} psi^j`.
    pub fn exterior_powers(&self, ring: &ChowRing, p: usize) -> Result<Vec<KClass>> {
        let mut lam = vec![KClass::trivial(ring, 1)];
        let adams: Vec<KClass> = (1..=p as u32).map(|j| self.adams(j)).collect::<Result<_>>()?;
        for k in 1..=p {
            let mut acc = ring.zero();
            for j in 1..=k {
                let term = ring.multiply(&lam[k - j].ch, &adams[j - 1].ch)?;
                acc = if j % 2 == 1 { &acc + &term } else { &acc - &term };
            }
            lam.push(KClass {
                ch: acc.scale(&(Q::one() / Q::from_integer((k as i64).into()))),
            });
        }
        Ok(lam)
    }

    pub fn exterior_power(&self, ring: &ChowRing, p: usize) -> Result<KClass> {
        Ok(self.exterior_powers(ring, p)?.pop().unwrap())
    }
}

/// `sum_k coeffs[k] x^k` for `x` without constant term, truncated at `A^{r-1}`.
pub fn apply_series(ring: &ChowRing, s: &Series, x: &ChowElement) -> Result<ChowElement> {
    ring.check(x)?;
    if !x.component(0)[0].is_zero() {
        return Err(Error::InvalidArgument(
            "power series are applied to classes without constant term".into(),
        ));
    }
    let top = ring.rank().min(s.len());
    let mut acc = ring.zero();
    for k in (0..top).rev() {
        acc = &ring.multiply(&acc, x)? + &ring.scalar(s.coeff(k));
    }
    Ok(acc)
}

/// Inverse of a class with constant term 1.
pub fn unit_inverse(ring: &ChowRing, u: &ChowElement) -> Result<ChowElement> {
    if !u.component(0)[0].is_one() {
        return Err(Error::InvalidArgument("unit must have constant term 1".into()));
    }
    let x = u - &ring.one();
    let geo = Series((0..ring.rank()).map(|k| if k % 2 == 0 { Q::one() } else { -Q::one() }).collect());
    apply_series(ring, &geo, &x)
}

/// `ch` from Chern data by Newton's identities: `ch_k = p_k / k!`.
pub fn chern_to_ch(ring: &ChowRing, cd: &ChernData) -> Result<KClass> {
    ring.check(&cd.total)?;
    if !cd.total.component(0)[0].is_one() {
        return Err(Error::InvalidArgument("total Chern class must start with 1".into()));
    }
    let r = ring.rank();
    let e: Vec<ChowElement> = (0..r).map(|k| cd.c(k)).collect();
    let mut p: Vec<ChowElement> = vec![ring.zero()];
    for k in 1..r {
        let kq = Q::from_integer((k as i64).into());
        let mut pk = e[k].scale(&kq);
        if k % 2 == 0 {
            pk = -&pk;
        }
        for i in 1..k {
            let t = ring.multiply(&e[i], &p[k - i])?;
            pk = if i % 2 == 1 { &pk + &t } else { &pk - &t };
        }
        p.push(pk);
    }
    let mut ch = ring.scalar(Q::from_integer(cd.rank.into()));
    for (k, pk) in p.iter().enumerate().skip(1) {
        ch = &ch + &pk.scale(&(Q::one() / factorial(k as u32)));
    }
    Ok(KClass { ch })
}
