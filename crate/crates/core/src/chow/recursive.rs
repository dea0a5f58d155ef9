//! Degrees of `beta^b x_{F_1}^{d_1} ... x_{F_k}^{d_k} alpha^a` computed by
//! cutting at the smallest flat of the chain and recursing on minors.
//! Shares nothing with the normal-form machinery, so it serves as an
//! independent check of `ChowRing::degree`.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::matroid::{compress, Flag, Mask, Matroid};
use crate::rational::{binomial, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMonomial {
    pub beta_pow: usize,
    /// `(flat members, exponent)` along a strictly increasing chain.
    pub chain: Vec<(Mask, usize)>,
    pub alpha_pow: usize,
}

impl ChainMonomial {
    pub fn total_degree(&self) -> usize {
        self.beta_pow + self.alpha_pow + self.chain.iter().map(|c| c.1).sum::<usize>()
    }
}

/// `deg(alpha^{r-1-d} beta^d) = (-1)^d sum_{I ⊆ [d]} (-1)^{|I|} N_{∅,I}`.
pub fn key_valuative_degree(m: &Matroid, d: usize) -> Result<Q> {
    let r = m.rank();
    if d >= r {
        return Err(Error::Rank(format!("beta power {d} must be below rank {r}")));
    }
    let mut total: i64 = 0;
    let empty = Flag::empty();
    for sel in 0u32..(1 << d) {
        let ranks: Vec<usize> = (0..d).filter(|i| sel >> i & 1 == 1).map(|i| i + 1).collect();
        let n = m.count_flags(&empty, &ranks)? as i64;
        total += if ranks.len().is_multiple_of(2) { n } else { -n };
    }
    if d % 2 == 1 {
        total = -total;
    }
    Ok(Q::from_integer(total.into()))
}

pub fn degree_recursive(m: &Matroid, mono: &ChainMonomial) -> Result<Q> {
    let r = m.rank();
    if mono.total_degree() != r - 1 {
        return Err(Error::InvalidArgument(format!(
            "monomial has degree {}, expected {}",
            mono.total_degree(),
            r - 1
        )));
    }
    let sets: Vec<Mask> = mono.chain.iter().map(|c| c.0).collect();
    Flag::new(m, &sets)?;
    if mono.chain.iter().any(|c| c.1 == 0) {
        return Err(Error::InvalidArgument("chain exponents must be positive".into()));
    }
    // the alpha exponent is whatever the degree budget leaves over
    rec(m, mono.beta_pow, &mono.chain)
}

fn rec(m: &Matroid, b0: usize, chain: &[(Mask, usize)]) -> Result<Q> {
    let Some(&(f1, d1)) = chain.first() else {
        return key_valuative_degree(m, b0);
    };
    let flat = m.flat(f1)?;
    let rk = flat.rank as i64;
    // deg(x_F g) = deg_{M_F} ⊗ deg_{M^F} of phi(g); the factor
    // phi(x_F)^{d1-1} = (-1)^{d1-1} sum_i C(d1-1, i) beta^i ⊗ alpha^{d1-1-i}
    // meets the degree budget of M^F for exactly one i.
    let i = b0 as i64 + d1 as i64 - rk;
    if i < 0 || i > d1 as i64 - 1 {
        return Ok(Q::zero());
    }
    let upper = m.restrict_flat(&flat)?;
    let right = key_valuative_degree(&upper, b0)?;
    if right.is_zero() {
        return Ok(Q::zero());
    }
    let lower = m.contract_flat(&flat)?;
    let rest = m.ground_mask() & !f1;
    let left_chain: Vec<(Mask, usize)> = chain[1..]
        .iter()
        .map(|&(g, e)| (compress(g & !f1, rest), e))
        .collect();
    let left = rec(&lower, i as usize, &left_chain)?;
    let sign = if (d1 - 1) % 2 == 0 { Q::one() } else { -Q::one() };
    Ok(sign * binomial(d1 as i64 - 1, i) * right * left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn mono(b: usize, chain: &[(Mask, usize)], a: usize) -> ChainMonomial {
        ChainMonomial {
            beta_pow: b,
            chain: chain.to_vec(),
            alpha_pow: a,
        }
    }

    #[test]
    fn uniform_examples() {
        let m = Matroid::uniform(3, 4).unwrap();
        assert_eq!(degree_recursive(&m, &mono(0, &[], 2)).unwrap(), q(1));
        assert_eq!(degree_recursive(&m, &mono(1, &[], 1)).unwrap(), q(3));
        assert_eq!(degree_recursive(&m, &mono(2, &[], 0)).unwrap(), q(3));
        assert_eq!(degree_recursive(&m, &mono(0, &[(0b11, 1)], 1)).unwrap(), q(0));
        assert_eq!(degree_recursive(&m, &mono(0, &[(0b11, 2)], 0)).unwrap(), q(-1));
        assert_eq!(degree_recursive(&m, &mono(0, &[(0b1, 1), (0b11, 1)], 0)).unwrap(), q(1));
    }

    #[test]
    fn rejects_bad_input() {
        let m = Matroid::uniform(3, 4).unwrap();
        assert!(degree_recursive(&m, &mono(0, &[(0b11, 1), (0b1, 1)], 0)).is_err());
        assert!(degree_recursive(&m, &mono(0, &[(0b11, 1), (0b1100, 1)], 0)).is_err());
        assert!(degree_recursive(&m, &mono(0, &[], 1)).is_err());
    }
}
