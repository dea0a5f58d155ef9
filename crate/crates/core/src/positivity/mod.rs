//! Nefness in its three flavours, ampleness and bigness, decided by exact
//! LP feasibility. Representatives of a divisor class form the affine space
//! `D + span(L_j)` with `L_j = sum_{F ∋ 1} x_F - sum_{F ∋ j} x_F`, so every
//! flag LP has the `n - 1` multipliers of the `L_j` as free variables.

mod products;

use num::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::chow::{ChowRing, DivisorClass};
use crate::error::{Error, Result};
use crate::lp::{Feasibility, Relation};
use crate::matroid::{full_mask, Flag, Mask, Matroid};
use crate::rational::{self, Q};

pub use products::{
    beta_product_positive, deg_alpha_product, default_generators, fake_effective_probe,
    kv_strong_scan, kv_weak_scan, mixed_degree, nef_product_expand, numerical_dimension,
    rank3_kv_ingredients, volume_coefficient, KvScan, Rank3Ingredients,
};

/// Largest ground set for the subset LP behind P1.
pub const P1_MAX_ELEMENTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NefProperty {
    P2,
    P3,
    Ample,
}

impl NefProperty {
    pub fn name(self) -> &'static str {
        match self {
            NefProperty::P2 => "P2",
            NefProperty::P3 => "P3",
            NefProperty::Ample => "ample",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagCertificate {
    pub flag: Flag,
    /// Representative of the divisor indexed like the proper flats.
    pub coeffs: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NefCertificate {
    pub property: NefProperty,
    pub flags: Vec<FlagCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NefResult {
    pub holds: bool,
    pub certificate: Option<NefCertificate>,
    /// First flag (in enumeration order) whose LP is infeasible.
    pub failing_flag: Option<Flag>,
}

/// Values `c_S` on all subsets, `c_∅ = c_E = 0`, locally submodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmodularLift {
    pub values: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P1Result {
    pub holds: bool,
    pub lift: Option<SubmodularLift>,
}

/// `L_j(F)` for `j = 2..n` as rows over the proper flats.
fn relation_rows(m: &Matroid) -> Vec<Vec<Q>> {
    let proper = m.flats().proper();
    (1..m.n())
        .map(|j| {
            proper
                .iter()
                .map(|f| Q::from_integer(((f.members & 1) as i64 - (f.members >> j & 1) as i64).into()))
                .collect()
        })
        .collect()
}

fn check_len(m: &Matroid, d: &DivisorClass) -> Result<()> {
    let n = m.flats().proper().len();
    if d.coeffs.len() != n {
        return Err(Error::InvalidArgument(format!(
            "divisor has {} coefficients, expected {n}",
            d.coeffs.len()
        )));
    }
    Ok(())
}

/// Solves the LP of one flag; returns a representative on success.
pub fn certificate_for_flag(
    m: &Matroid,
    d: &DivisorClass,
    flag: &Flag,
    property: NefProperty,
) -> Result<Option<Vec<Q>>> {
    check_len(m, d)?;
    flag.validate(m)?;
    let rows = relation_rows(m);
    Ok(solve_flag(m, d, flag, property, &rows))
}

fn solve_flag(m: &Matroid, d: &DivisorClass, flag: &Flag, property: NefProperty, rows: &[Vec<Q>]) -> Option<Vec<Q>> {
    let proper = m.flats().proper();
    let k = rows.len();
    let ample = property == NefProperty::Ample;
    // variables: [t (ample only)] + multipliers
    let offset = usize::from(ample);
    let mut free = vec![true; k + offset];
    if ample {
        free[0] = false;
    }
    let mut lp = Feasibility::new(free);
    if ample {
        let mut t = vec![Q::zero(); k + 1];
        t[0] = Q::one();
        lp.push(t, Relation::Ge, Q::one());
    }
    for (id, f) in proper.iter().enumerate() {
        let in_flag = flag.flats.iter().any(|g| g.members == f.members);
        let constrained = in_flag
            || match property {
                NefProperty::P2 => true,
                NefProperty::P3 | NefProperty::Ample => flag.can_insert(f),
            };
        if !constrained {
            continue;
        }
        let mut coeffs = Vec::with_capacity(k + offset);
        if ample {
            coeffs.push(d.coeffs[id].clone());
        }
        coeffs.extend(rows.iter().map(|r| r[id].clone()));
        let (rel, rhs) = match (in_flag, ample) {
            (true, true) => (Relation::Eq, Q::zero()),
            (true, false) => (Relation::Eq, -d.coeffs[id].clone()),
            (false, true) => (Relation::Ge, Q::one()),
            (false, false) => (Relation::Ge, -d.coeffs[id].clone()),
        };
        lp.push(coeffs, rel, rhs);
    }
    let sol = lp.solve()?;
    let (scale, lambda) = if ample {
        (sol[0].clone(), &sol[1..])
    } else {
        (Q::one(), &sol[..])
    };
    let coeffs = (0..proper.len())
        .map(|id| {
            let shift: Q = rows.iter().zip(lambda).map(|(r, l)| &r[id] * l).sum();
            if ample {
                &d.coeffs[id] + shift / &scale
            } else {
                &d.coeffs[id] + shift
            }
        })
        .collect();
    Some(coeffs)
}

fn check_flags(m: &Matroid, d: &DivisorClass, property: NefProperty) -> Result<NefResult> {
    check_len(m, d)?;
    let rows = relation_rows(m);
    let mut certs = Vec::new();
    for flag in m.all_flags() {
        match solve_flag(m, d, &flag, property, &rows) {
            Some(coeffs) => certs.push(FlagCertificate { flag, coeffs }),
            None => {
                return Ok(NefResult {
                    holds: false,
                    certificate: None,
                    failing_flag: Some(flag),
                })
            }
        }
    }
    Ok(NefResult {
        holds: true,
        certificate: Some(NefCertificate {
            property,
            flags: certs,
        }),
        failing_flag: None,
    })
}

/// Every flag admits a representative vanishing on it and nonnegative on
/// the flats insertable into it.
pub fn check_p3(m: &Matroid, d: &DivisorClass) -> Result<NefResult> {
    check_flags(m, d, NefProperty::P3)
}

/// As P3, with nonnegativity on all flats.
pub fn check_p2(m: &Matroid, d: &DivisorClass) -> Result<NefResult> {
    check_flags(m, d, NefProperty::P2)
}

/// As P3, with strict positivity on insertable flats. Strictness is made
/// closed by scaling: `t D + sum mu_j L_j >= 1` with `t >= 1`.
pub fn check_ample(m: &Matroid, d: &DivisorClass) -> Result<NefResult> {
    check_flags(m, d, NefProperty::Ample)
}

/// `D` is the restriction of a nef class of the permutohedral variety: a
/// submodular `c` on all subsets, `c_∅ = c_E = 0`, with
/// `sum_{F flat} c_F x_F ≡ D`.
pub fn check_p1(m: &Matroid, d: &DivisorClass) -> Result<P1Result> {
    check_len(m, d)?;
    let n = m.n();
    if n > P1_MAX_ELEMENTS {
        return Err(Error::Capacity {
            what: "ground set for the submodular lift",
            count: n,
            limit: P1_MAX_ELEMENTS,
        });
    }
    let full = full_mask(n);
    // variables: c_S for 0 < S < E (index S - 1), then the multipliers
    let nsub = (full as usize) - 1;
    let rows = relation_rows(m);
    let k = rows.len();
    let var = |s: Mask| -> Option<usize> { (s != 0 && s != full).then(|| s as usize - 1) };
    let mut lp = Feasibility::new(vec![true; nsub + k]);
    for s in 0..=full {
        for i in 0..n {
            if s >> i & 1 == 1 {
                continue;
            }
            for j in (i + 1)..n {
                if s >> j & 1 == 1 {
                    continue;
                }
                // c_{S+i} + c_{S+j} - c_{S+i+j} - c_S >= 0
                let mut row = vec![Q::zero(); nsub + k];
                let terms = [(s | 1 << i, 1), (s | 1 << j, 1), (s | 1 << i | 1 << j, -1), (s, -1)];
                for (t, c) in terms {
                    if let Some(v) = var(t) {
                        row[v] += Q::from_integer(c.into());
                    }
                }
                lp.push(row, Relation::Ge, Q::zero());
            }
        }
    }
    // c_F - sum_j lambda_j L_j(F) = d_F on every proper flat
    for (id, f) in m.flats().proper().iter().enumerate() {
        let mut row = vec![Q::zero(); nsub + k];
        row[var(f.members).unwrap()] = Q::one();
        for (j, r) in rows.iter().enumerate() {
            row[nsub + j] = -r[id].clone();
        }
        lp.push(row, Relation::Eq, d.coeffs[id].clone());
    }
    Ok(match lp.solve() {
        Some(x) => {
            let mut values = vec![Q::zero(); full as usize + 1];
            for s in 1..full {
                values[s as usize] = x[s as usize - 1].clone();
            }
            P1Result {
                holds: true,
                lift: Some(SubmodularLift { values }),
            }
        }
        None => P1Result {
            holds: false,
            lift: None,
        },
    })
}

/// P3 together with `deg(D^{r-1}) > 0`.
pub fn is_big_and_nef(ring: &ChowRing, d: &DivisorClass) -> Result<bool> {
    if !check_p3(ring.matroid(), d)?.holds {
        return Ok(false);
    }
    let e = ring.divisor(d)?;
    Ok(ring.degree(&ring.pow(&e, ring.rank() - 1)?)?.is_positive())
}

/// Independent validation of a certificate: same class, zero on the flag,
/// and the sign conditions of its property.
pub fn verify_certificate(ring: &ChowRing, d: &DivisorClass, cert: &NefCertificate) -> Result<bool> {
    let m = ring.matroid();
    let proper = m.flats().proper();
    for fc in &cert.flags {
        let rep = DivisorClass {
            coeffs: fc.coeffs.clone(),
        };
        if !ring.same_class(d, &rep)? {
            return Ok(false);
        }
        for (id, f) in proper.iter().enumerate() {
            let c = &fc.coeffs[id];
            let in_flag = fc.flag.flats.iter().any(|g| g.members == f.members);
            let ok = if in_flag {
                c.is_zero()
            } else {
                match cert.property {
                    NefProperty::P2 => !c.is_negative(),
                    NefProperty::P3 => !fc.flag.can_insert(f) || !c.is_negative(),
                    NefProperty::Ample => !fc.flag.can_insert(f) || c.is_positive(),
                }
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Independent validation of a lift: submodular on all pairs, zero at the
/// ends, and restricting to the class of `d`.
pub fn verify_lift(ring: &ChowRing, d: &DivisorClass, lift: &SubmodularLift) -> Result<bool> {
    let m = ring.matroid();
    let full = m.ground_mask();
    let c = &lift.values;
    if !c[0].is_zero() || !c[full as usize].is_zero() {
        return Ok(false);
    }
    for a in 0..=full {
        for b in 0..=full {
            if &c[(a | b) as usize] + &c[(a & b) as usize] > &c[a as usize] + &c[b as usize] {
                return Ok(false);
            }
        }
    }
    let rep = DivisorClass {
        coeffs: m.flats().proper().iter().map(|f| c[f.members as usize].clone()).collect(),
    };
    ring.same_class(d, &rep)
}

fn flag_json(flag: &Flag) -> Value {
    Value::Array(flag.flats.iter().map(|f| json!(f.elements())).collect())
}

impl NefCertificate {
    pub fn to_json(&self, m: &Matroid) -> Value {
        let proper = m.flats().proper();
        let flags: Vec<Value> = self
            .flags
            .iter()
            .map(|fc| {
                let mut coeffs = Map::new();
                for (f, c) in proper.iter().zip(&fc.coeffs) {
                    if !c.is_zero() {
                        coeffs.insert(f.to_string(), rational::render(c).into());
                    }
                }
                json!({"flag": flag_json(&fc.flag), "coeffs": coeffs})
            })
            .collect();
        json!({"property": self.property.name(), "flags": flags})
    }
}

impl SubmodularLift {
    pub fn to_json(&self, n: usize) -> Value {
        let mut map = Map::new();
        for s in 1..(1usize << n) - 1 {
            if !self.values[s].is_zero() {
                map.insert(crate::matroid::render_set(s as Mask), rational::render(&self.values[s]).into());
            }
        }
        Value::Object(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn div(m: &Matroid, terms: &[(Mask, i64)], alpha: i64) -> DivisorClass {
        let mut d = DivisorClass::alpha(m).scale(&q(alpha));
        for &(s, c) in terms {
            d = d.add(&DivisorClass::x(m, s).unwrap().scale(&q(c)));
        }
        d
    }

    #[test]
    fn p3_not_p2_witness() {
        let m = Matroid::uniform(3, 6).unwrap();
        // x_1 + x_2 + 2 x_12 + x_14 + x_25 + x_16 + x_26
        let l = div(
            &m,
            &[(0b1, 1), (0b10, 1), (0b11, 2), (0b1001, 1), (0b10010, 1), (0b100001, 1), (0b100010, 1)],
            0,
        );
        let ring = ChowRing::build(&m).unwrap();
        let p3 = check_p3(&m, &l).unwrap();
        assert!(p3.holds);
        assert!(verify_certificate(&ring, &l, p3.certificate.as_ref().unwrap()).unwrap());
        assert!(!check_p2(&m, &l).unwrap().holds);
    }

    #[test]
    fn p2_not_p1_witness() {
        let m = Matroid::uniform(3, 4).unwrap();
        let l = div(&m, &[(0b0110, -1), (0b1010, -1), (0b0101, -1), (0b1001, -1)], 2);
        let ring = ChowRing::build(&m).unwrap();
        let p2 = check_p2(&m, &l).unwrap();
        assert!(p2.holds);
        assert!(verify_certificate(&ring, &l, p2.certificate.as_ref().unwrap()).unwrap());
        assert!(check_p3(&m, &l).unwrap().holds);
        assert!(!check_p1(&m, &l).unwrap().holds);
    }

    #[test]
    fn alpha_beta_classes() {
        let m = Matroid::uniform(3, 4).unwrap();
        let ring = ChowRing::build(&m).unwrap();
        for s in [0b1, 0b11, 0b111, 0b1111] {
            for d in [DivisorClass::alpha_s(&m, s).unwrap(), DivisorClass::beta_s(&m, s).unwrap()] {
                let p1 = check_p1(&m, &d).unwrap();
                assert!(p1.holds);
                assert!(verify_lift(&ring, &d, p1.lift.as_ref().unwrap()).unwrap());
                assert!(check_p3(&m, &d).unwrap().holds);
            }
        }
        let neg = DivisorClass::alpha(&m).scale(&q(-1));
        let res = check_p3(&m, &neg).unwrap();
        assert!(!res.holds);
        assert_eq!(res.failing_flag, Some(Flag::empty()));
        assert!(check_p2(&m, &DivisorClass::zero(&m)).unwrap().holds);
    }

    #[test]
    fn ampleness() {
        let m = Matroid::uniform(3, 4).unwrap();
        let ring = ChowRing::build(&m).unwrap();
        let ab = DivisorClass::alpha(&m).add(&DivisorClass::beta(&m));
        let res = check_ample(&m, &ab).unwrap();
        assert!(res.holds);
        assert!(verify_certificate(&ring, &ab, res.certificate.as_ref().unwrap()).unwrap());
        assert!(!check_ample(&m, &DivisorClass::alpha(&m)).unwrap().holds);
        assert!(!check_ample(&m, &DivisorClass::zero(&m)).unwrap().holds);
    }

    #[test]
    fn big_and_nef() {
        let m = Matroid::uniform(3, 5).unwrap();
        let ring = ChowRing::build(&m).unwrap();
        assert!(is_big_and_nef(&ring, &DivisorClass::alpha(&m)).unwrap());
        // x_F for a rank-2 flat squares to -1; it is not nef
        assert!(!is_big_and_nef(&ring, &DivisorClass::x(&m, 0b11).unwrap()).unwrap());
        // beta_S with rk S = 1 has vanishing square
        let b = DivisorClass::beta_s(&m, 0b1).unwrap();
        assert!(check_p3(&m, &b).unwrap().holds);
        assert!(!is_big_and_nef(&ring, &b).unwrap());
    }

    #[test]
    fn capacity_for_p1() {
        let m = Matroid::uniform(2, 11).unwrap();
        assert!(matches!(check_p1(&m, &DivisorClass::alpha(&m)), Err(Error::Capacity { .. })));
    }
}
