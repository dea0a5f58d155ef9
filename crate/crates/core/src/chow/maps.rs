//! Pullback to `A*(M_F) ⊗ A*(M^F)`, pushforward back, and the deletion map.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::{ChowElement, ChowRing};
use crate::error::{Error, Result};
use crate::matroid::{compress, expand, is_subset, Flat, Mask};
use crate::rational::Q;

/// Element of `A*(M_F) ⊗ A*(M^F)` as a list of `(left, right)` pairs.
#[derive(Debug, Clone)]
pub struct Tensor {
    pub left_ring: u64,
    pub right_ring: u64,
    pub terms: Vec<(ChowElement, ChowElement)>,
}

/// Key `(left degree, left basis position, right degree, right basis position)`.
pub type TensorKey = (usize, usize, usize, usize);

impl Tensor {
    /// Coefficients over the product basis; equal tensors have equal maps.
    pub fn coefficients(&self) -> BTreeMap<TensorKey, Q> {
        let mut out: BTreeMap<TensorKey, Q> = BTreeMap::new();
        for (l, r) in &self.terms {
            for (dl, lp) in l.parts.iter().enumerate() {
                for (pl, lv) in lp.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    for (dr, rp) in r.parts.iter().enumerate() {
                        for (pr, rv) in rp.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                            *out.entry((dl, pl, dr, pr)).or_insert_with(Q::zero) += lv * rv;
                        }
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients().is_empty()
    }
}

/// The two minors at a proper flat `F` with their Chow rings.
#[derive(Debug)]
pub struct FlatSplit {
    pub flat: Flat,
    /// `A*(M_F)`, ground set `E \ F` relabeled in order.
    pub left: ChowRing,
    /// `A*(M^F)`, ground set `F` relabeled in order.
    pub right: ChowRing,
}

impl ChowRing {
    pub fn split(&self, f: Mask) -> Result<FlatSplit> {
        let flat = self.matroid.flat(f)?;
        if f == 0 || f == self.matroid.ground_mask() {
            return Err(Error::InvalidArgument(format!("{flat} is not a proper nonempty flat")));
        }
        Ok(FlatSplit {
            flat,
            left: ChowRing::build(&self.matroid.contract_flat(&flat)?)?,
            right: ChowRing::build(&self.matroid.restrict_flat(&flat)?)?,
        })
    }

    /// `phi(x_G)` as a tensor: zero if incomparable, `1 ⊗ x_G` below `F`,
    /// `x_{G\F} ⊗ 1` above `F`, and `-(1 ⊗ alpha + beta ⊗ 1)` at `F`.
    fn phi_generator(&self, s: &FlatSplit, g: Mask) -> Vec<(ChowElement, ChowElement)> {
        let f = s.flat.members;
        let rest = self.matroid.ground_mask() & !f;
        if g == f {
            vec![
                (-&s.left.one(), s.right.alpha()),
                (-&s.left.beta(), s.right.one()),
            ]
        } else if is_subset(g, f) {
            vec![(s.left.one(), s.right.x(compress(g, f)).expect("flat of restriction"))]
        } else if is_subset(f, g) {
            vec![(s.left.x(compress(g & !f, rest)).expect("flat of contraction"), s.right.one())]
        } else {
            Vec::new()
        }
    }

    pub fn pullback_phi(&self, s: &FlatSplit, a: &ChowElement) -> Result<Tensor> {
        self.check(a)?;
        let proper = self.matroid.flats().proper();
        let mut terms = Vec::new();
        for (d, part) in a.parts.iter().enumerate() {
            for (p, c) in part.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let mut acc = vec![(s.left.scalar(c.clone()), s.right.one())];
                for &id in self.basis_monomial(d, p) {
                    let gen = self.phi_generator(s, proper[id as usize].members);
                    let mut next = Vec::with_capacity(acc.len() * gen.len());
                    for (l, r) in &acc {
                        for (gl, gr) in &gen {
                            next.push((s.left.multiply(l, gl)?, s.right.multiply(r, gr)?));
                        }
                    }
                    acc = next;
                }
                terms.extend(acc);
            }
        }
        Ok(Tensor {
            left_ring: s.left.id,
            right_ring: s.right.id,
            terms,
        })
    }

    /// `psi(prod x_{G'} ⊗ prod x_{G''}) = x_F prod x_{G' ∪ F} prod x_{G''}`.
    pub fn pushforward_psi(&self, s: &FlatSplit, t: &Tensor) -> Result<ChowElement> {
        if t.left_ring != s.left.id || t.right_ring != s.right.id {
            return Err(Error::InvalidArgument(
                "tensor does not belong to the split at this flat".into(),
            ));
        }
        let f = s.flat.members;
        let rest = self.matroid.ground_mask() & !f;
        let lattice = self.matroid.flats();
        let f_id = lattice.proper_index(f).unwrap() as u16;
        let lp = s.left.matroid.flats().proper();
        let rp = s.right.matroid.flats().proper();
        let mut out = self.zero();
        for ((dl, pl, dr, pr), c) in t.coefficients() {
            let mut mono = vec![f_id];
            for &g in s.left.basis_monomial(dl, pl) {
                let up = expand(lp[g as usize].members, rest) | f;
                mono.push(lattice.proper_index(up).unwrap() as u16);
            }
            for &g in s.right.basis_monomial(dr, pr) {
                let down = expand(rp[g as usize].members, f);
                mono.push(lattice.proper_index(down).unwrap() as u16);
            }
            out = &out + &self.monomial(&mono).scale(&c);
        }
        Ok(out)
    }

    /// `deg_{M_F} ⊗ deg_{M^F}` on the bidegree `(r - rk F - 1, rk F - 1)`.
    pub fn tensor_degree(&self, s: &FlatSplit, t: &Tensor) -> Result<Q> {
        if t.left_ring != s.left.id || t.right_ring != s.right.id {
            return Err(Error::InvalidArgument(
                "tensor does not belong to the split at this flat".into(),
            ));
        }
        let (tl, tr) = (s.left.top_degree(), s.right.top_degree());
        let mut total = Q::zero();
        for ((dl, _, dr, _), c) in t.coefficients() {
            if dl != tl || dr != tr {
                return Err(Error::InvalidArgument(format!(
                    "tensor has a component of bidegree ({dl}, {dr}), expected ({tl}, {tr})"
                )));
            }
            total += c;
        }
        let unit = s.left.degree_of_top(&s.left.basis_element(tl, 0))
            * s.right.degree_of_top(&s.right.basis_element(tr, 0));
        Ok(total * unit)
    }

    /// `theta_i: A*(M \ i) -> A*(M)`, `x_G -> x_G + x_{G ∪ i}` with
    /// non-flats dropped. `small` must be the ring of `M \ i`.
    pub fn deletion_theta(&self, i: usize, small: &ChowRing, a: &ChowElement) -> Result<ChowElement> {
        small.check(a)?;
        let n = self.matroid.n();
        if i == 0 || i > n {
            return Err(Error::InvalidArgument(format!("element {i} outside 1..{n}")));
        }
        let bit: Mask = 1 << (i - 1);
        let support = self.matroid.ground_mask() & !bit;
        let lattice = self.matroid.flats();
        let sp = small.matroid.flats().proper();
        let images: Vec<ChowElement> = sp
            .iter()
            .map(|g| {
                let g = expand(g.members, support);
                let mut e = self.zero();
                for h in [g, g | bit] {
                    if let Some(id) = lattice.proper_index(h) {
                        e = &e + &self.monomial(&[id as u16]);
                    }
                }
                e
            })
            .collect();
        let mut out = self.zero();
        for (d, part) in a.parts.iter().enumerate() {
            for (p, c) in part.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let mut term = self.scalar(c.clone());
                for &g in small.basis_monomial(d, p) {
                    term = self.multiply(&term, &images[g as usize])?;
                }
                out = &out + &term;
            }
        }
        Ok(out)
    }

    /// Basis element at position `p` of degree `d`.
    pub fn basis_element(&self, d: usize, p: usize) -> ChowElement {
        let mut e = self.zero();
        e.parts[d][p] = Q::one();
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Matroid;
    use crate::rational::q;

    #[test]
    fn phi_examples() {
        let m = Matroid::uniform(3, 4).unwrap();
        let ring = ChowRing::build(&m).unwrap();
        let s = ring.split(0b0011).unwrap();
        // incomparable generator
        let t = ring.pullback_phi(&s, &ring.x(0b1100).unwrap()).unwrap();
        assert!(t.is_zero());
        // alpha goes to alpha ⊗ 1
        let t = ring.pullback_phi(&s, &ring.alpha()).unwrap();
        let expect = Tensor {
            left_ring: s.left.id,
            right_ring: s.right.id,
            terms: vec![(s.left.alpha(), s.right.one())],
        };
        assert_eq!(t.coefficients(), expect.coefficients());
        // psi(1 ⊗ 1) = x_F
        let unit = Tensor {
            left_ring: s.left.id,
            right_ring: s.right.id,
            terms: vec![(s.left.one(), s.right.one())],
        };
        assert_eq!(ring.pushforward_psi(&s, &unit).unwrap(), ring.x(0b0011).unwrap());
        // deg(x_F alpha) = deg_F(phi(alpha)) = 0
        let lhs = ring.degree(&ring.multiply(&ring.x(0b0011).unwrap(), &ring.alpha()).unwrap()).unwrap();
        let rhs = ring.tensor_degree(&s, &ring.pullback_phi(&s, &ring.alpha()).unwrap()).unwrap();
        assert_eq!(lhs, q(0));
        assert_eq!(rhs, q(0));
    }

    #[test]
    fn theta_non_coloop() {
        let m = Matroid::uniform(3, 4).unwrap();
        let big = ChowRing::build(&m).unwrap();
        let small = ChowRing::build(&m.delete(4).unwrap()).unwrap();
        assert!(big.deletion_theta(4, &small, &small.zero()).unwrap().is_zero());
        let b2 = small.pow(&small.beta(), 2).unwrap();
        let lifted = big.deletion_theta(4, &small, &b2).unwrap();
        assert_eq!(big.degree(&lifted).unwrap(), small.degree(&b2).unwrap());
    }
}
