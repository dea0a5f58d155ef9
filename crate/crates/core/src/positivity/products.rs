//! Degrees of products of divisors: nef expansions, probes of the fake
//! effective cone, dragon-Hall-Rado products and Kawamata–Viehweg scans.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use super::{check_p3, is_big_and_nef, NefCertificate};
use crate::chow::{ChowElement, ChowRing, DivisorClass};
use crate::error::{Error, Result};
use crate::ktheory::KTheory;
use crate::matroid::{Flag, Mask};
use crate::rational::{factorial, Q};

fn product(ring: &ChowRing, ls: &[DivisorClass]) -> Result<ChowElement> {
    let mut acc = ring.one();
    for l in ls {
        acc = ring.multiply(&acc, &ring.divisor(l)?)?;
    }
    Ok(acc)
}

/// `deg(l_1 ... l_{r-1})`.
pub fn mixed_degree(ring: &ChowRing, ls: &[DivisorClass]) -> Result<Q> {
    if ls.len() != ring.top_degree() {
        return Err(Error::InvalidArgument(format!(
            "mixed degree needs {} factors, got {}",
            ring.top_degree(),
            ls.len()
        )));
    }
    ring.degree(&product(ring, ls)?)
}

/// Coefficient of `prod t_i^{e_i}` in `deg((sum t_i l_i)^{r-1}) / (r-1)!`,
/// i.e. `deg(prod l_i^{e_i}) / prod e_i!`.
pub fn volume_coefficient(ring: &ChowRing, ls: &[DivisorClass], exponents: &[usize]) -> Result<Q> {
    if ls.len() != exponents.len() {
        return Err(Error::InvalidArgument("one exponent per divisor".into()));
    }
    let mut factors = Vec::new();
    let mut denom = Q::one();
    for (l, &e) in ls.iter().zip(exponents) {
        factors.extend(std::iter::repeat_n(l.clone(), e));
        denom *= factorial(e as u32);
    }
    Ok(mixed_degree(ring, &factors)? / denom)
}

/// Largest `t` with `D^t != 0`.
pub fn numerical_dimension(ring: &ChowRing, d: &DivisorClass) -> Result<usize> {
    let e = ring.divisor(d)?;
    let mut p = ring.one();
    let mut t = 0;
    for k in 1..ring.rank() {
        p = ring.multiply(&p, &e)?;
        if p.is_zero() {
            break;
        }
        t = k;
    }
    Ok(t)
}

/// Writes `l_1 ... l_k` as a nonnegative combination of flag monomials
/// `x_F1 ... x_Fj` by multiplying one factor at a time, using for each
/// current flag the P3 representative that vanishes on it.
pub fn nef_product_expand(ring: &ChowRing, ls: &[DivisorClass]) -> Result<BTreeMap<Flag, Q>> {
    let m = ring.matroid();
    if ls.len() > ring.top_degree() {
        return Err(Error::InvalidArgument(format!(
            "at most {} factors, got {}",
            ring.top_degree(),
            ls.len()
        )));
    }
    let mut certs: Vec<NefCertificate> = Vec::new();
    for (i, l) in ls.iter().enumerate() {
        let res = check_p3(m, l)?;
        match res.certificate {
            Some(c) => certs.push(c),
            None => {
                return Err(Error::InfeasiblePrecondition(format!("factor #{} is not nef (P3)", i + 1)))
            }
        }
    }
    let proper = m.flats().proper();
    let mut current: BTreeMap<Flag, Q> = BTreeMap::new();
    current.insert(Flag::empty(), Q::one());
    for cert in &certs {
        let by_flag: BTreeMap<&Flag, &Vec<Q>> = cert.flags.iter().map(|fc| (&fc.flag, &fc.coeffs)).collect();
        let mut next: BTreeMap<Flag, Q> = BTreeMap::new();
        for (flag, lam) in &current {
            let coeffs = by_flag[flag];
            for (id, f) in proper.iter().enumerate() {
                let c = &coeffs[id];
                if c.is_zero() || !flag.can_insert(f) {
                    continue;
                }
                let mut flats = flag.flats.clone();
                flats.push(*f);
                flats.sort();
                *next.entry(Flag { flats }).or_insert_with(Q::zero) += lam * c;
            }
        }
        current = next;
    }
    current.retain(|_, v| !v.is_zero());
    Ok(current)
}

/// The classes `alpha_S` and `beta_S` for all nonempty `S`, deduplicated.
pub fn default_generators(ring: &ChowRing) -> Result<Vec<DivisorClass>> {
    let m = ring.matroid();
    let mut out: Vec<DivisorClass> = Vec::new();
    let mut seen: Vec<ChowElement> = Vec::new();
    for s in 1..=m.ground_mask() {
        for d in [DivisorClass::alpha_s(m, s)?, DivisorClass::beta_s(m, s)?] {
            let e = ring.divisor(&d)?;
            if !seen.contains(&e) {
                seen.push(e);
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// One-sided membership test for the fake effective cone: `false` as soon
/// as `deg(D l_1 ... l_{r-2}) < 0` for a multiset of generators. The
/// generators are assumed nef; `true` only means no violation was found.
pub fn fake_effective_probe(ring: &ChowRing, d: &DivisorClass, generators: &[DivisorClass]) -> Result<bool> {
    let k = ring.rank().saturating_sub(2);
    let gens: Vec<ChowElement> = generators.iter().map(|g| ring.divisor(g)).collect::<Result<_>>()?;
    let start = ring.divisor(d)?;
    fn rec(ring: &ChowRing, gens: &[ChowElement], from: usize, left: usize, acc: &ChowElement) -> Result<bool> {
        if left == 0 {
            return Ok(!ring.degree(acc)?.is_negative());
        }
        for i in from..gens.len() {
            if !rec(ring, gens, i, left - 1, &ring.multiply(acc, &gens[i])?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
    if ring.rank() < 2 {
        return Ok(true);
    }
    rec(ring, &gens, 0, k, &start)
}

fn check_arity(ring: &ChowRing, sets: &[Mask]) -> Result<()> {
    if sets.len() != ring.top_degree() {
        return Err(Error::InvalidArgument(format!(
            "need {} subsets, got {}",
            ring.top_degree(),
            sets.len()
        )));
    }
    Ok(())
}

/// `deg(alpha_{S_1} ... alpha_{S_{r-1}})`: 1 iff the sets satisfy the
/// dragon-Hall-Rado condition. Both sides are computed and compared.
pub fn deg_alpha_product(ring: &ChowRing, sets: &[Mask]) -> Result<u8> {
    check_arity(ring, sets)?;
    let m = ring.matroid();
    let dhr = m.dragon_hall_rado(sets)?;
    let ls: Vec<DivisorClass> = sets.iter().map(|&s| DivisorClass::alpha_s(m, s)).collect::<Result<_>>()?;
    let deg = mixed_degree(ring, &ls)?;
    let expect = if dhr { Q::one() } else { Q::zero() };
    if deg != expect {
        return Err(Error::Internal(format!(
            "alpha product degree {deg} disagrees with dragon-Hall-Rado ({dhr}) for {sets:?}"
        )));
    }
    Ok(u8::from(dhr))
}

/// `deg(beta_{S_1} ... beta_{S_{r-1}}) > 0`, checked against the alpha side.
pub fn beta_product_positive(ring: &ChowRing, sets: &[Mask]) -> Result<bool> {
    let alpha = deg_alpha_product(ring, sets)?;
    let m = ring.matroid();
    let ls: Vec<DivisorClass> = sets.iter().map(|&s| DivisorClass::beta_s(m, s)).collect::<Result<_>>()?;
    let positive = mixed_degree(ring, &ls)?.is_positive();
    if positive != (alpha == 1) {
        return Err(Error::Internal(format!(
            "beta product positivity ({positive}) disagrees with the alpha product for {sets:?}"
        )));
    }
    Ok(positive)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KvScan {
    pub sign_ok: bool,
    pub value: Q,
}

/// `(-1)^{r-1} deg(zeta(-D))` for a nef divisor.
pub fn kv_weak_scan(kt: &KTheory, d: &DivisorClass) -> Result<KvScan> {
    let ring = kt.ring();
    if !check_p3(ring.matroid(), d)?.holds {
        return Err(Error::InfeasiblePrecondition("divisor is not nef (P3)".into()));
    }
    let z = kt.zeta(&d.scale(&-Q::one()))?;
    let mut value = ring.degree_of_top(&z);
    if ring.top_degree() % 2 == 1 {
        value = -value;
    }
    Ok(KvScan {
        sign_ok: !value.is_negative(),
        value,
    })
}

/// `(-1)^{r-1} chi(-D)` for a big and nef divisor.
pub fn kv_strong_scan(kt: &KTheory, d: &DivisorClass) -> Result<KvScan> {
    let ring = kt.ring();
    if !is_big_and_nef(ring, d)? {
        return Err(Error::InfeasiblePrecondition("divisor is not big and nef".into()));
    }
    let mut value = kt.chi_hrr_divisor(&d.scale(&-Q::one()))?;
    if ring.top_degree() % 2 == 1 {
        value = -value;
    }
    Ok(KvScan {
        sign_ok: !value.is_negative(),
        value,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank3Ingredients {
    /// `deg(alpha D)`.
    pub a: Q,
    /// `deg(D x_F)` for each rank-2 flat.
    pub b: Vec<(Mask, Q)>,
    /// `deg(D (D - alpha + S_1)) = a(a-1) - sum b(b-1)`.
    pub value: Q,
}

/// For a nonzero nef divisor on a rank-3 matroid, `l = a alpha - sum b_F x_F`
/// over rank-2 flats and `deg(l (l - alpha + S_1)) = a(a-1) - sum b_F(b_F-1)`.
pub fn rank3_kv_ingredients(ring: &ChowRing, d: &DivisorClass) -> Result<Rank3Ingredients> {
    let m = ring.matroid();
    if m.rank() != 3 {
        return Err(Error::Rank(format!("rank-3 matroid required, got rank {}", m.rank())));
    }
    let e = ring.divisor(d)?;
    if e.is_zero() {
        return Err(Error::InfeasiblePrecondition("divisor is zero".into()));
    }
    if !check_p3(m, d)?.holds {
        return Err(Error::InfeasiblePrecondition("divisor is not nef (P3)".into()));
    }
    let deg = |x: &ChowElement| -> Result<Q> { ring.degree(&ring.multiply(&e, x)?) };
    let a = deg(&ring.alpha())?;
    let mut b = Vec::new();
    for f in m.flats().by_rank(2) {
        b.push((f.members, deg(&ring.x(f.members)?)?));
    }
    let twisted = &(&e - &ring.alpha()) + &ring.s_k(1)?;
    let value = deg(&twisted)?;
    let formula = &a * (&a - Q::one()) - b.iter().map(|(_, v)| v * (v - Q::one())).sum::<Q>();
    if value != formula {
        return Err(Error::Internal(format!(
            "deg(l(l - alpha + S_1)) = {value} but a(a-1) - sum b(b-1) = {formula}"
        )));
    }
    if value.is_negative() {
        return Err(Error::Internal(format!("deg(l(l - alpha + S_1)) = {value} < 0 for a nef divisor")));
    }
    Ok(Rank3Ingredients { a, b, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Matroid;
    use crate::rational::q;

    fn setup(r: usize, n: usize) -> (Matroid, ChowRing) {
        let m = Matroid::uniform(r, n).unwrap();
        let ring = ChowRing::build(&m).unwrap();
        (m, ring)
    }

    #[test]
    fn volume_and_mixed() {
        let (m, ring) = setup(3, 4);
        let (a, b) = (DivisorClass::alpha(&m), DivisorClass::beta(&m));
        assert_eq!(mixed_degree(&ring, &[a.clone(), a.clone()]).unwrap(), q(1));
        assert_eq!(mixed_degree(&ring, &[b.clone(), b.clone()]).unwrap(), q(3));
        assert_eq!(mixed_degree(&ring, &[a.clone(), b.clone()]).unwrap(), q(3));
        assert_eq!(volume_coefficient(&ring, &[a.clone(), b.clone()], &[1, 1]).unwrap(), q(3));
        assert_eq!(volume_coefficient(&ring, std::slice::from_ref(&a), &[2]).unwrap(), crate::rational::qf(1, 2));
        assert!(mixed_degree(&ring, &[a]).is_err());
    }

    #[test]
    fn numerical_dimensions() {
        let (m, ring) = setup(4, 5);
        assert_eq!(numerical_dimension(&ring, &DivisorClass::alpha(&m)).unwrap(), 3);
        for s in [0b1, 0b11, 0b111, 0b11111] {
            let b = DivisorClass::beta_s(&m, s).unwrap();
            assert_eq!(numerical_dimension(&ring, &b).unwrap(), m.rank_of(s) - 1);
        }
    }

    #[test]
    fn nef_expansion() {
        let (m, ring) = setup(3, 4);
        let a = DivisorClass::alpha(&m);
        let exp = nef_product_expand(&ring, &[a.clone(), a.clone()]).unwrap();
        assert!(exp.values().all(|v| !v.is_negative()));
        assert!(exp.keys().all(|f| f.len() == 2));
        assert_eq!(exp.values().sum::<Q>(), q(1));
        assert_eq!(nef_product_expand(&ring, &[]).unwrap().get(&Flag::empty()), Some(&q(1)));
        let s = DivisorClass::alpha_s(&m, 0b11).unwrap();
        let single = nef_product_expand(&ring, std::slice::from_ref(&s)).unwrap();
        let mut back = ring.zero();
        for (flag, c) in &single {
            back = &back + &ring.x(flag.flats[0].members).unwrap().scale(c);
        }
        assert_eq!(back, ring.divisor(&s).unwrap());
    }

    #[test]
    fn fake_effective() {
        let (m, ring) = setup(3, 4);
        let gens = default_generators(&ring).unwrap();
        assert!(fake_effective_probe(&ring, &DivisorClass::alpha(&m), &gens).unwrap());
        assert!(!fake_effective_probe(&ring, &DivisorClass::alpha(&m).scale(&q(-1)), &gens).unwrap());
        assert!(fake_effective_probe(&ring, &DivisorClass::x(&m, 0b11).unwrap(), &gens).unwrap());
    }

    #[test]
    fn dhr_products() {
        let (m, ring) = setup(3, 4);
        assert_eq!(deg_alpha_product(&ring, &[0b11, 0b1100]).unwrap(), 1);
        assert_eq!(deg_alpha_product(&ring, &[0b1, 0b1]).unwrap(), 0);
        let e = m.ground_mask();
        assert_eq!(deg_alpha_product(&ring, &[e, e]).unwrap(), 1);
        assert!(beta_product_positive(&ring, &[0b11, 0b1100]).unwrap());
        assert!(!beta_product_positive(&ring, &[0b1, 0b1]).unwrap());
        assert!(beta_product_positive(&ring, &[e, e]).unwrap());
        assert!(deg_alpha_product(&ring, &[e]).is_err());
    }

    #[test]
    fn kv_scans() {
        let (m, ring) = setup(3, 4);
        let kt = KTheory::new(&ring).unwrap();
        let a = DivisorClass::alpha(&m);
        assert!(kv_weak_scan(&kt, &a).unwrap().sign_ok);
        assert!(kv_strong_scan(&kt, &a).unwrap().sign_ok);
        let zero = kv_weak_scan(&kt, &DivisorClass::zero(&m)).unwrap();
        assert_eq!(zero.value, q(0));
        assert!(matches!(kv_weak_scan(&kt, &a.scale(&q(-1))), Err(Error::InfeasiblePrecondition(_))));
    }

    #[test]
    fn rank_three_ingredients() {
        let (m, ring) = setup(3, 4);
        let d = DivisorClass::alpha(&m).scale(&q(2)).sub(&DivisorClass::x(&m, 0b11).unwrap());
        let res = rank3_kv_ingredients(&ring, &d).unwrap();
        assert_eq!(res.a, q(2));
        for (f, b) in &res.b {
            assert_eq!(*b, if *f == 0b11 { q(1) } else { q(0) });
        }
        assert_eq!(res.value, q(2));
        let alpha = rank3_kv_ingredients(&ring, &DivisorClass::alpha(&m)).unwrap();
        assert_eq!(alpha.a, q(1));
        assert_eq!(alpha.value, q(0));
        assert!(rank3_kv_ingredients(&ring, &DivisorClass::zero(&m)).is_err());
    }
}
