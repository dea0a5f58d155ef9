//! Euler characteristics of line bundles and K-classes.

use std::sync::OnceLock;

use num::{One, Signed, Zero};

use super::{apply_series, chern_tm, chern_to_ch, todd_tm, KClass};
use crate::chow::{ChowElement, ChowRing, DivisorClass};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matroid::Flat;
use crate::rational::{self, Q};
use crate::series::Series;

/// A divisor written as `sum_F c_F alpha_F` over flats of rank at least 2
/// (the top flat `E` included, `alpha_E = alpha`). Rank-one flats are
/// absent because `alpha_F = 0` for them; the remaining `alpha_F` form a
/// basis of `A^1`, so the expression is unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaExpression {
    pub terms: Vec<(Flat, Q)>,
}

impl AlphaExpression {
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(f, c)| format!("{}*alpha_{}", rational::render(c), f))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Per-ring data for Euler characteristics.
pub struct KTheory<'a> {
    ring: &'a ChowRing,
    alpha_flats: Vec<Flat>,
    /// Inverse of the matrix whose rows are the `alpha_F` in `A^1` coordinates.
    alpha_inverse: Vec<Vec<Q>>,
    /// `-log(1 - alpha_F) = sum_k alpha_F^k / k`.
    log_terms: Vec<ChowElement>,
    /// `x -> deg(x * (1 + alpha + alpha^2 + ...))` per degree.
    geometric_pairing: Vec<Vec<Q>>,
    todd: OnceLock<Result<(ChowElement, Vec<Vec<Q>>)>>,
    /// `x -> deg(x * ch(omega_M) * td)`.
    twisted: OnceLock<Result<Vec<Vec<Q>>>>,
}

fn pairing_against(ring: &ChowRing, g: &ChowElement) -> Result<Vec<Vec<Q>>> {
    let mut out = Vec::with_capacity(ring.rank());
    for d in 0..ring.rank() {
        let mut v = Vec::with_capacity(ring.dim(d));
        for p in 0..ring.dim(d) {
            let prod = ring.multiply(&ring.basis_element(d, p), g)?;
            v.push(ring.degree_of_top(&prod));
        }
        out.push(v);
    }
    Ok(out)
}

fn evaluate(pairing: &[Vec<Q>], x: &ChowElement) -> Q {
    let mut total = Q::zero();
    for (d, v) in pairing.iter().enumerate() {
        for (a, b) in v.iter().zip(x.component(d)) {
            if !b.is_zero() {
                total += a * b;
            }
        }
    }
    total
}

impl<'a> KTheory<'a> {
    pub fn new(ring: &'a ChowRing) -> Result<Self> {
        let m = ring.matroid();
        let mut alpha_flats: Vec<Flat> = m
            .flats()
            .proper()
            .iter()
            .filter(|f| f.rank >= 2)
            .copied()
            .collect();
        alpha_flats.push(m.top());
        let classes: Vec<ChowElement> = alpha_flats
            .iter()
            .map(|f| ring.alpha_s(f.members))
            .collect::<Result<_>>()?;
        let matrix: Vec<Vec<Q>> = classes.iter().map(|c| c.component(1).to_vec()).collect();
        let alpha_inverse = if ring.rank() >= 2 {
            linalg::inverse(&matrix).ok_or_else(|| {
                Error::Internal("the classes alpha_F do not form a basis of A^1".into())
            })?
        } else {
            Vec::new()
        };
        let log_series = Series(
            (0..ring.rank())
                .map(|k| if k == 0 { Q::zero() } else { Q::one() / Q::from_integer((k as i64).into()) })
                .collect(),
        );
        let log_terms = classes
            .iter()
            .map(|c| apply_series(ring, &log_series, c))
            .collect::<Result<_>>()?;
        let geo = apply_series(ring, &Series(vec![Q::one(); ring.rank()]), &ring.alpha())?;
        let geometric_pairing = pairing_against(ring, &geo)?;
        Ok(KTheory {
            ring,
            alpha_flats,
            alpha_inverse,
            log_terms,
            geometric_pairing,
            todd: OnceLock::new(),
            twisted: OnceLock::new(),
        })
    }

    pub fn ring(&self) -> &ChowRing {
        self.ring
    }

    /// Unique expression of `d` in the classes `alpha_F`.
    pub fn alpha_expression(&self, d: &DivisorClass) -> Result<AlphaExpression> {
        let coords = self.ring.divisor(d)?;
        let v = coords.component(1);
        let n = self.alpha_flats.len();
        let mut terms = Vec::with_capacity(n);
        for (j, f) in self.alpha_flats.iter().enumerate() {
            let mut c = Q::zero();
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    c += x * &self.alpha_inverse[i][j];
                }
            }
            terms.push((*f, c));
        }
        if self.ring.rank() < 2 {
            terms.clear();
        }
        Ok(AlphaExpression { terms })
    }

    /// `zeta_M(D) = prod_F (1 - alpha_F)^{-c_F}` for integral `c_F`.
    pub fn zeta(&self, d: &DivisorClass) -> Result<ChowElement> {
        let expr = self.alpha_expression(d)?;
        if !expr.is_integral() {
            return Err(Error::NonIntegral);
        }
        let mut x = self.ring.zero();
        for ((_, c), l) in expr.terms.iter().zip(&self.log_terms) {
            if !c.is_zero() {
                x = &x + &l.scale(c);
            }
        }
        apply_series(self.ring, &Series::exponential(self.ring.rank()), &x)
    }

    /// `deg(zeta(D) * (1 + alpha + ... + alpha^{r-1}))`.
    pub fn chi_zeta(&self, d: &DivisorClass) -> Result<Q> {
        Ok(evaluate(&self.geometric_pairing, &self.zeta(d)?))
    }

    fn todd_data(&self) -> Result<&(ChowElement, Vec<Vec<Q>>)> {
        self.todd
            .get_or_init(|| {
                let td = todd_tm(self.ring)?;
                let pairing = pairing_against(self.ring, &td)?;
                Ok((td, pairing))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn todd_class(&self) -> Result<ChowElement> {
        Ok(self.todd_data()?.0.clone())
    }

    /// `deg(ch(k) * td(T_M))`.
    pub fn chi_hrr(&self, k: &KClass) -> Result<Q> {
        self.ring.check(&k.ch)?;
        Ok(evaluate(&self.todd_data()?.1, &k.ch))
    }

    pub fn line(&self, d: &DivisorClass) -> Result<KClass> {
        KClass::line(self.ring, &self.ring.divisor(d)?)
    }

    pub fn chi_hrr_divisor(&self, d: &DivisorClass) -> Result<Q> {
        self.chi_hrr(&self.line(d)?)
    }

    pub fn canonical_bundle(&self) -> Result<KClass> {
        self.line(&super::canonical_class(self.ring.matroid())?)
    }

    /// `chi(k^dual ⊗ omega_M)`.
    pub fn chi_dual_twisted(&self, k: &KClass) -> Result<Q> {
        self.ring.check(&k.ch)?;
        let pairing = self
            .twisted
            .get_or_init(|| {
                let g = self.ring.multiply(&self.canonical_bundle()?.ch, &self.todd_data()?.0)?;
                pairing_against(self.ring, &g)
            })
            .as_ref()
            .map_err(Clone::clone)?;
        Ok(evaluate(pairing, &k.dual().ch))
    }

    /// `chi(k) = (-1)^{r-1} chi(k^dual ⊗ omega)`.
    pub fn serre_check(&self, k: &KClass) -> Result<bool> {
        let lhs = self.chi_hrr(k)?;
        let mut rhs = self.chi_dual_twisted(k)?;
        if (self.ring.rank() - 1) % 2 == 1 {
            rhs = -rhs;
        }
        Ok(lhs == rhs)
    }

    /// The tangent class as a K-class.
    pub fn tangent_class(&self) -> Result<KClass> {
        chern_to_ch(self.ring, &chern_tm(self.ring)?)
    }

    /// `(-1)^p chi(lambda^p Omega_M)` for `0 <= p < r`, unchecked.
    pub fn chow_polynomial_by_euler(&self) -> Result<Vec<Q>> {
        let omega = self.tangent_class()?.dual();
        let lam = omega.exterior_powers(self.ring, self.ring.rank() - 1)?;
        lam.iter()
            .enumerate()
            .map(|(p, l)| {
                let chi = self.chi_hrr(l)?;
                Ok(if p % 2 == 0 { chi } else { -chi })
            })
            .collect()
    }

    /// Chow polynomial coefficients, asserted to be nonnegative integers
    /// equal to the ring dimensions.
    pub fn chow_polynomial(&self) -> Result<Vec<i64>> {
        let coeffs = self.chow_polynomial_by_euler()?;
        let dims = self.ring.dims();
        let mut out = Vec::with_capacity(coeffs.len());
        for (p, c) in coeffs.iter().enumerate() {
            let ok = c.is_integer() && !c.is_negative() && rational::to_i64(c) == Some(dims[p] as i64);
            if !ok {
                return Err(Error::Internal(format!(
                    "coefficient of t^{p} from Euler characteristics is {}, but dim A^{p} = {}",
                    rational::render(c),
                    dims[p]
                )));
            }
            out.push(dims[p] as i64);
        }
        Ok(out)
    }
}
