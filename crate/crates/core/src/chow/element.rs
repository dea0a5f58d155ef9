use std::ops::{Add, Mul, Neg, Sub};

use num::Zero;

use crate::rational::Q;

/// A class in `A*(M)`: dense coordinates over the standard-monomial basis
/// in each degree, tagged with the ring it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowElement {
    pub(crate) ring: u64,
    pub(crate) parts: Vec<Vec<Q>>,
}

impl ChowElement {
    pub(crate) fn zero(ring: u64, dims: &[usize]) -> Self {
        ChowElement {
            ring,
            parts: dims.iter().map(|&d| vec![Q::zero(); d]).collect(),
        }
    }

    pub fn ring_id(&self) -> u64 {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().flatten().all(Zero::is_zero)
    }

    /// Coordinates of the degree-`d` component.
    pub fn component(&self, d: usize) -> &[Q] {
        self.parts.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn homogeneous_part(&self, d: usize) -> ChowElement {
        let mut out = self.clone();
        for (i, p) in out.parts.iter_mut().enumerate() {
            if i != d {
                p.iter_mut().for_each(|v| *v = Q::zero());
            }
        }
        out
    }

    /// Degrees carrying a nonzero component.
    pub fn support_degrees(&self) -> Vec<usize> {
        (0..self.parts.len())
            .filter(|&d| self.parts[d].iter().any(|v| !v.is_zero()))
            .collect()
    }

    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.support_degrees().iter().all(|&e| e == d)
    }

    pub fn scale(&self, c: &Q) -> ChowElement {
        ChowElement {
            ring: self.ring,
            parts: self
                .parts
                .iter()
                .map(|p| p.iter().map(|v| v * c).collect())
                .collect(),
        }
    }

    fn zip(&self, other: &ChowElement, f: impl Fn(&Q, &Q) -> Q) -> ChowElement {
        assert_eq!(self.ring, other.ring, "classes from different Chow rings");
        ChowElement {
            ring: self.ring,
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
                .collect(),
        }
    }
}

impl Add for &ChowElement {
    type Output = ChowElement;
    fn add(self, rhs: &ChowElement) -> ChowElement {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &ChowElement {
    type Output = ChowElement;
    fn sub(self, rhs: &ChowElement) -> ChowElement {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for &ChowElement {
    type Output = ChowElement;
    fn neg(self) -> ChowElement {
        self.scale(&-Q::from_integer(1.into()))
    }
}

impl Mul<&Q> for &ChowElement {
    type Output = ChowElement;
    fn mul(self, rhs: &Q) -> ChowElement {
        self.scale(rhs)
    }
}
