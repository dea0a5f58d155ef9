//! Chern classes of the tautological quotient and tangent classes.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::{unit_inverse, ChernData};
use crate::chow::{ChowElement, ChowRing, DivisorClass};
use crate::error::Result;
use crate::rational::{binomial, Q};

/// `1 + alpha - sum_{j <= i} S_j` for `i = 0..r-1`.
fn stair_factors(ring: &ChowRing) -> Result<Vec<ChowElement>> {
    let r = ring.rank();
    let mut out = Vec::with_capacity(r);
    let mut cur = &ring.one() + &ring.alpha();
    out.push(cur.clone());
    for i in 1..r {
        cur = &cur - &ring.s_k(i)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// `c(Q_M) = prod_{i<r} (1 + alpha - sum_{j<=i} S_j)^{-1}`, rank `n - r`.
pub fn chern_qm(ring: &ChowRing) -> Result<ChernData> {
    let mut total = ring.one();
    for f in stair_factors(ring)? {
        total = ring.multiply(&total, &unit_inverse(ring, &f)?)?;
    }
    Ok(ChernData {
        rank: ring.matroid().n() as i64 - ring.rank() as i64,
        total,
    })
}

/// `c(T_M) = prod_{0<i<r} (1 + S_i) * prod_{i<r} (1 + alpha - sum_{j<=i} S_j)`.
pub fn chern_tm(ring: &ChowRing) -> Result<ChernData> {
    let mut total = ring.one();
    for i in 1..ring.rank() {
        total = ring.multiply(&total, &(&ring.one() + &ring.s_k(i)?))?;
    }
    for f in stair_factors(ring)? {
        total = ring.multiply(&total, &f)?;
    }
    Ok(ChernData {
        rank: ring.rank() as i64 - 1,
        total,
    })
}

/// Polynomial in `x = var 0`, `y_k = var k`, truncated above a total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Vec<u8>, Q>,
    pub max_degree: usize,
}

impl Poly {
    pub fn constant(c: Q, max_degree: usize) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms, max_degree }
    }

    pub fn var(v: usize, max_degree: usize) -> Poly {
        let mut e = vec![0u8; v + 1];
        e[v] = 1;
        let mut terms = BTreeMap::new();
        if max_degree >= 1 {
            terms.insert(e, Q::one());
        }
        Poly { terms, max_degree }
    }

    fn norm(mut e: Vec<u8>) -> Vec<u8> {
        while e.last() == Some(&0) {
            e.pop();
        }
        e
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let v = terms.entry(e.clone()).or_insert_with(Q::zero);
            *v += c;
            if v.is_zero() {
                terms.remove(e);
            }
        }
        Poly { terms, max_degree: self.max_degree }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            max_degree: self.max_degree,
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut terms: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da: usize = ea.iter().map(|&x| x as usize).sum();
            for (eb, cb) in &o.terms {
                let db: usize = eb.iter().map(|&x| x as usize).sum();
                if da + db > self.max_degree {
                    continue;
                }
                let mut e = vec![0u8; ea.len().max(eb.len())];
                for (i, x) in ea.iter().enumerate() {
                    e[i] += x;
                }
                for (i, x) in eb.iter().enumerate() {
                    e[i] += x;
                }
                *terms.entry(Self::norm(e)).or_insert_with(Q::zero) += ca * cb;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        Poly { terms, max_degree: self.max_degree }
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::constant(Q::one(), self.max_degree), |acc, _| acc.mul(self))
    }

    /// Evaluates at ring elements `vals[v]` for variable `v`.
    pub fn eval(&self, ring: &ChowRing, vals: &[ChowElement]) -> Result<ChowElement> {
        let mut powers: Vec<Vec<ChowElement>> = Vec::new();
        for v in vals {
            let mut p = vec![ring.one()];
            for k in 1..=self.max_degree {
                p.push(ring.multiply(&p[k - 1], v)?);
            }
            powers.push(p);
        }
        let mut out = ring.zero();
        for (e, c) in &self.terms {
            let mut t = ring.scalar(c.clone());
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = ring.multiply(&t, &powers[v][k as usize])?;
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }
}

/// The recursively defined polynomial `T_n(x, y_1, ..., y_{n-1})`,
/// truncated above total degree `max_degree`.
pub fn tangent_polynomial(n: usize, max_degree: usize) -> Poly {
    let mut t: Vec<Poly> = vec![Poly::constant(Q::one(), max_degree)];
    let one = Poly::constant(Q::one(), max_degree);
    let x = Poly::var(0, max_degree);
    for m in 1..=n {
        let mut tm = one.add(&x).pow(m + 1);
        for j in 1..m {
            let y = Poly::var(j, max_degree);
            let shifted = (1..j).fold(x.clone(), |acc, k| acc.add(&Poly::var(k, max_degree).scale(&-Q::one())));
            let one_minus_y = one.add(&y.scale(&-Q::one()));
            for i in 0..=(m + 1 - j) {
                let bracket = one.add(&y).mul(&one_minus_y.pow(i)).add(&one.scale(&-Q::one()));
                let term = t[j - 1]
                    .mul(&bracket)
                    .mul(&shifted.pow(m + 1 - i - j))
                    .scale(&binomial((m + 1 - j) as i64, i as i64));
                tm = tm.add(&term);
            }
        }
        t.push(tm);
    }
    t.pop().unwrap()
}

/// `T_{r-1}(alpha, S_1, ..., S_{r-2})`.
pub fn chern_tm_recursive(ring: &ChowRing) -> Result<ChernData> {
    let r = ring.rank();
    let poly = tangent_polynomial(r - 1, r - 1);
    let mut vals = vec![ring.alpha()];
    for k in 1..r.saturating_sub(1) {
        vals.push(ring.s_k(k)?);
    }
    Ok(ChernData {
        rank: r as i64 - 1,
        total: poly.eval(ring, &vals)?,
    })
}

/// `c_1(omega_M) = -r alpha + sum_{i=1}^{r-2} (r - i - 1) S_i`.
pub fn canonical_class(m: &crate::matroid::Matroid) -> Result<DivisorClass> {
    let r = m.rank();
    let mut d = DivisorClass::alpha(m).scale(&-Q::from_integer((r as i64).into()));
    for i in 1..r.saturating_sub(1) {
        d = d.add(&DivisorClass::s_k(m, i)?.scale(&Q::from_integer(((r - i - 1) as i64).into())));
    }
    Ok(d)
}
