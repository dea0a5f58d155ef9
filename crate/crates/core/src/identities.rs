//! A battery of identities that must hold on every matroid. Each pairs
//! two independent computations (or a computation and a closed form) and
//! reports the first offending input.

use std::collections::HashMap;

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chow::{ChainMonomial, ChowElement, ChowRing, DivisorClass, FlatSplit, Tensor};
use crate::chow::{degree_recursive, key_valuative_degree};
use crate::divisor::render_divisor;
use crate::error::{Error, Result};
use crate::ktheory::{self, apply_series, ChernData, KClass, KTheory};
use crate::linalg;
use crate::matroid::{elements, is_subset, popcount, render_set, Flag, Mask, Matroid};
use crate::positivity::beta_product_positive;
use crate::rational::{self, q, Q};
use crate::series::Series;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Number of instances checked; zero when the identity is vacuous here.
    pub cases: usize,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random instances for the identities quantified over divisors or K-classes.
    pub random_cases: usize,
    /// Cap on instances of any enumerated family; larger families are thinned
    /// by a fixed stride.
    pub max_cases: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            random_cases: 20,
            max_cases: 2000,
        }
    }
}

pub const IDENTITY_NAMES: &[&str] = &[
    "degree_normalization",
    "poincare_pairing",
    "degree_recursive",
    "key_valuative",
    "counting_lemma",
    "vanishing_alpha_beta",
    "vanishing_between_flats",
    "chern_tm_recursive",
    "s_top_elimination",
    "todd_dual",
    "chi_zeta_hrr",
    "serre_duality",
    "chow_polynomial",
    "chi_minus_flat",
    "zeta_extreme_flats",
    "zeta_alpha_beta",
    "phi_psi",
    "theta_degree",
    "theta_beta",
    "dhr_alpha_beta",
    "deletion_contraction",
    "chi_beta_restriction",
    "b_decomposition",
];

struct Tally {
    name: &'static str,
    cases: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            witness: None,
        }
    }

    fn case(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn done(self) -> IdentityOutcome {
        IdentityOutcome {
            name: self.name,
            passed: self.witness.is_none(),
            cases: self.cases,
            witness: self.witness,
        }
    }
}

/// Every `k`-th index so that at most `cap` of `total` are visited.
fn stride(total: usize, cap: usize) -> usize {
    if cap == 0 {
        usize::MAX
    } else {
        total.div_ceil(cap).max(1)
    }
}

/// Runs every identity. Internal inconsistencies inside a check count as
/// failures; capacity and validation errors are returned.
pub fn run_suite(ring: &ChowRing, opts: &SuiteOptions) -> Result<Vec<IdentityOutcome>> {
    let kt = KTheory::new(ring)?;
    let mut out = Vec::with_capacity(IDENTITY_NAMES.len());
    for &name in IDENTITY_NAMES {
        out.push(run_one(name, &kt, opts)?);
    }
    Ok(out)
}

pub fn run_one(name: &str, kt: &KTheory, opts: &SuiteOptions) -> Result<IdentityOutcome> {
    let Some(&name) = IDENTITY_NAMES.iter().find(|&&n| n == name) else {
        return Err(Error::InvalidArgument(format!("unknown identity '{name}'")));
    };
    let ring = kt.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut t = Tally::new(name);
    let res = match name {
        "degree_normalization" => degree_normalization(ring, &mut t),
        "poincare_pairing" => poincare_pairing(ring, &mut t),
        "degree_recursive" => degree_vs_recursive(ring, opts, &mut t),
        "key_valuative" => key_valuative(ring, &mut t),
        "counting_lemma" => counting_lemma(ring.matroid(), &mut t),
        "vanishing_alpha_beta" => vanishing_alpha_beta(ring, &mut t),
        "vanishing_between_flats" => vanishing_between(ring, opts, &mut t),
        "chern_tm_recursive" => chern_recursive(ring, &mut t),
        "s_top_elimination" => s_top_elimination(ring, &mut t),
        "todd_dual" => todd_dual(ring, opts, &mut rng, &mut t),
        "chi_zeta_hrr" => chi_zeta_hrr(kt, opts.random_cases, &mut rng, &mut t),
        "serre_duality" => serre(kt, opts.random_cases, &mut rng, &mut t),
        "chow_polynomial" => chow_polynomial(kt, &mut t),
        "chi_minus_flat" => chi_minus_flat(kt, &mut t),
        "zeta_extreme_flats" => zeta_extreme_flats(kt, &mut t),
        "zeta_alpha_beta" => zeta_alpha_beta(kt, opts, &mut t),
        "phi_psi" => phi_psi(ring, opts, &mut t),
        "theta_degree" => theta_degree(ring, opts, &mut t),
        "theta_beta" => theta_beta(ring, opts, &mut t),
        "dhr_alpha_beta" => dhr_alpha_beta(ring, opts, &mut t),
        "deletion_contraction" => deletion_contraction(kt, 4, &mut t),
        "chi_beta_restriction" => chi_beta_restriction(kt, opts, &mut t),
        "b_decomposition" => b_decomposition(kt, opts, &mut t),
        _ => unreachable!(),
    };
    match res {
        Ok(()) => Ok(t.done()),
        Err(Error::Internal(msg)) => {
            t.case(false, || msg);
            Ok(t.done())
        }
        Err(e) => Err(e),
    }
}

/// A random divisor with small integer coefficients on a few `x_F`.
pub fn random_divisor(m: &Matroid, rng: &mut impl Rng, bound: i64) -> DivisorClass {
    let mut d = DivisorClass::zero(m);
    let k = d.coeffs.len();
    if k == 0 {
        return d;
    }
    for _ in 0..rng.gen_range(1..=k.min(4)) {
        let i = rng.gen_range(0..k);
        d.coeffs[i] += q(rng.gen_range(-bound..=bound));
    }
    d
}

/// A random virtual sum of line bundles.
pub fn random_kclass(kt: &KTheory, rng: &mut impl Rng) -> Result<KClass> {
    let ring = kt.ring();
    let mut k = KClass::trivial(ring, rng.gen_range(-2..=2));
    for _ in 0..rng.gen_range(1..=3) {
        let l = kt.line(&random_divisor(ring.matroid(), rng, 3))?;
        k = if rng.gen_bool(0.5) { k.add(&l) } else { k.sub(&l) };
    }
    Ok(k)
}

fn flat_ids(ring: &ChowRing, flats: &[Mask]) -> Vec<u16> {
    let lattice = ring.matroid().flats();
    flats.iter().map(|&f| lattice.proper_index(f).unwrap() as u16).collect()
}

fn degree_normalization(ring: &ChowRing, t: &mut Tally) -> Result<()> {
    for flag in ring.matroid().complete_flags() {
        let sets: Vec<Mask> = flag.flats.iter().map(|f| f.members).collect();
        let deg = ring.degree(&ring.monomial(&flat_ids(ring, &sets)))?;
        t.case(deg.is_one(), || format!("complete flag {} has degree {deg}", render_flag(&flag)));
    }
    Ok(())
}

fn poincare_pairing(ring: &ChowRing, t: &mut Tally) -> Result<()> {
    let top = ring.top_degree();
    for d in 0..=top {
        let p = ring.pairing_matrix(d)?;
        let full = linalg::rank(&p) == ring.dim(d) && ring.dim(d) == ring.dim(top - d);
        t.case(full, || format!("pairing in degree {d} is singular"));
        let other = ring.pairing_matrix(top - d)?;
        let transposed = (0..p.len()).all(|i| (0..other.len()).all(|j| p[i][j] == other[j][i]));
        t.case(transposed, || format!("pairings in degrees {d} and {} are not transposes", top - d));
    }
    Ok(())
}

/// The chain of a sorted flat-id monomial, with exponents.
fn chain_of(ring: &ChowRing, mono: &[u16]) -> Vec<(Mask, usize)> {
    let mut chain: Vec<(usize, Mask, usize)> = Vec::new();
    for &id in mono {
        let f = ring.flat_of(id);
        match chain.iter_mut().find(|c| c.1 == f.members) {
            Some(c) => c.2 += 1,
            None => chain.push((f.rank, f.members, 1)),
        }
    }
    chain.sort();
    chain.into_iter().map(|(_, m, e)| (m, e)).collect()
}

fn render_chain_monomial(cm: &ChainMonomial) -> String {
    let mut parts = Vec::new();
    if cm.beta_pow > 0 {
        parts.push(format!("beta^{}", cm.beta_pow));
    }
    for &(f, e) in &cm.chain {
        parts.push(format!("x{}^{e}", render_set(f)));
    }
    if cm.alpha_pow > 0 {
        parts.push(format!("alpha^{}", cm.alpha_pow));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn degree_vs_recursive(ring: &ChowRing, opts: &SuiteOptions, t: &mut Tally) -> Result<()> {
    let m = ring.matroid();
    let top = ring.top_degree();
    let (alpha, beta) = (ring.alpha(), ring.beta());
    let mut beta_pows = vec![ring.one()];
    let mut alpha_pows = vec![ring.one()];
    for _ in 0..top {
        beta_pows.push(ring.multiply(beta_pows.last().unwrap(), &beta)?);
        alpha_pows.push(ring.multiply(alpha_pows.last().unwrap(), &alpha)?);
    }
    let total: usize = (0..=top).map(|k| ring.chain_monomials(k).len() * (top - k + 1)).sum();
    let step = stride(total, opts.max_cases);
    let mut idx = 0;
    for k in 0..=top {
        for mono in ring.chain_monomials(k) {
            for b in 0..=top - k {
                idx += 1;
                if (idx - 1) % step != 0 {
                    continue;
                }
                let a = top - k - b;
                let cm = ChainMonomial {
                    beta_pow: b,
                    chain: chain_of(ring, mono),
                    alpha_pow: a,
                };
                let ab = ring.multiply(&beta_pows[b], &alpha_pows[a])?;
                let direct = ring.degree(&ring.multiply(&ring.monomial(mono), &ab)?)?;
                let rec = degree_recursive(m, &cm)?;
                t.case(direct == rec, || {
                    format!("{}: normal form gives {direct}, recursion gives {rec}", render_chain_monomial(&cm))
                });
            }
        }
    }
    Ok(())
}

fn key_valuative(ring: &ChowRing, t: &mut Tally) -> Result<()> {
    let top = ring.top_degree();
    let (alpha, beta) = (ring.alpha(), ring.beta());
    for d in 0..=top {
        let x = ring.multiply(&ring.pow(&alpha, top - d)?, &ring.pow(&beta, d)?)?;
        let direct = ring.degree(&x)?;
        let counted = key_valuative_degree(ring.matroid(), d)?;
        t.case(direct == counted, || {
            format!("deg(alpha^{} beta^{d}) = {direct}, flag count gives {counted}", top - d)
        });
    }
    Ok(())
}

fn counting_lemma(m: &Matroid, t: &mut Tally) -> Result<()> {
    let r = m.rank();
    let empty = Flag::empty();
    for d in 1..r {
        let mut rhs: i64 = 0;
        for sel in 0u32..(1 << d) {
            let ranks: Vec<usize> = (0..d).filter(|i| sel >> i & 1 == 1).map(|i| i + 1).collect();
            let c = m.count_flags(&empty, &ranks)? as i64;
            rhs += if ranks.len().is_multiple_of(2) { c } else { -c };
        }
        for s in 1..=m.n() {
            let mut lhs: i64 = 0;
            for sel in 0u32..(1 << (d - 1)) {
                let mut ranks: Vec<usize> = (0..d - 1).filter(|i| sel >> i & 1 == 1).map(|i| i + 1).collect();
                ranks.push(d);
                let c = m.count_flags_avoiding(&empty, &ranks, s)? as i64;
                lhs += if ranks.len().is_multiple_of(2) { c } else { -c };
            }
            t.case(lhs == rhs, || format!("d = {d}, s = {s}: {lhs} != {rhs}"));
        }
    }
    Ok(())
}

fn vanishing_alpha_beta(ring: &ChowRing, t: &mut Tally) -> Result<()> {
    let r = ring.rank();
    let (alpha, beta) = (ring.alpha(), ring.beta());
    for f in ring.matroid().flats().proper() {
        let x = ring.x(f.members)?;
        let a = ring.multiply(&x, &ring.pow(&alpha, r - f.rank)?)?;
        t.case(a.is_zero(), || format!("x_{f} alpha^{} != 0", r - f.rank));
        let b = ring.multiply(&x, &ring.pow(&beta, f.rank)?)?;
        t.case(b.is_zero(), || format!("x_{f} beta^{} != 0", f.rank));
    }
    let deg_a = ring.degree(&ring.pow(&alpha, r - 1)?)?;
    t.case(deg_a.is_one(), || format!("deg(alpha^(r-1)) = {deg_a}"));
    let deg_b = ring.degree(&ring.pow(&beta, r - 1)?)?;
    t.case(deg_b > Q::zero(), || format!("deg(beta^(r-1)) = {deg_b}"));
    Ok(())
}

/// `x_{F1} f x_{F2} = 0` for `f` of degree `rk F2 - rk F1` strictly between.
fn vanishing_between(ring: &ChowRing, opts: &SuiteOptions, t: &mut Tally) -> Result<()> {
    let m = ring.matroid();
    let mut all: Vec<_> = vec![m.bottom()];
    all.extend(m.flats().proper().iter().copied());
    all.push(m.top());
    let mut budget = opts.max_cases;
    for lo in &all {
        for hi in &all {
            if !lo.is_below(hi) {
                continue;
            }
            let d = hi.rank - lo.rank;
            if d > ring.top_degree() {
                continue;
            }
            for mono in ring.chain_monomials(d) {
                let inside = mono.iter().all(|&id| {
                    let g = ring.flat_of(id).members;
                    g != lo.members && g != hi.members && is_subset(lo.members, g) && is_subset(g, hi.members)
                });
                if !inside {
                    continue;
                }
                if budget == 0 {
                    return Ok(());
                }
                budget -= 1;
                let mut x = ring.monomial(mono);
                for f in [lo, hi] {
                    if f.rank != 0 && f.rank != m.rank() {
                        x = ring.multiply(&x, &ring.x(f.members)?)?;
                    }
                }
                t.case(x.is_zero(), || format!("x_{lo} * {} * x_{hi} != 0", ring.monomial_key(mono)));
            }
        }
    }
    Ok(())
}

fn chern_recursive(ring: &ChowRing, t: &mut Tally) -> Result<()> {
    let a = ktheory::chern_tm(ring)?;
    let b = ktheory::chern_tm_recursive(ring)?;
    let bad = (0..ring.rank()).find(|&k| a.c(k) != b.c(k));
    t.case(bad.is_none(), || format!("c_{} differs between the product and the recursion", bad.unwrap()));
    Ok(())
}

/// `(1 + S_{r-1})(1 + alpha - sum_{j<r} S_j) = 1 + alpha - sum_{j<=r-2} S_j`.
fn s_top_elimination(ring: &ChowRing, t: &mut Tally) -> Result<()> {
    let r = ring.rank();
    if r < 2 {
        return Ok(());
    }
    let mut partial = &ring.one() + &ring.alpha();
    for j in 1..r - 1 {
        partial = &partial - &ring.s_k(j)?;
    }
    let last = ring.s_k(r - 1)?;
    let lhs = ring.multiply(&(&ring.one() + &last), &(&partial - &last))?;
    t.case(lhs == partial, || "S_{r-1} does not cancel".into());
    Ok(())
}

fn dual_of(x: &ChowElement) -> ChowElement {
    KClass { ch: x.clone() }.dual().ch
}

/// `td(E) exp(-c_1(E)) = td(E)^dual` for the tangent class and random
/// rank-two Chern data.
fn todd_dual(ring: &ChowRing, opts: &SuiteOptions, rng: &mut impl Rng, t: &mut Tally) -> Result<()> {
    let m = ring.matroid();
    let mut data = vec![("T_M".to_string(), ktheory::chern_tm(ring)?)];
    for _ in 0..opts.random_cases.min(10) {
        let (d1, d2) = (random_divisor(m, rng, 3), random_divisor(m, rng, 3));
        let total = ring.multiply(&(&ring.one() + &ring.divisor(&d1)?), &(&ring.one() + &ring.divisor(&d2)?))?;
        let label = format!("(1 + {})(1 + {})", render_divisor(m, &d1), render_divisor(m, &d2));
        data.push((label, ChernData { rank: 2, total }));
    }
    for (label, cd) in data {
        let td = ktheory::todd(ring, &cd)?;
        let e = apply_series(ring, &Series::exponential(ring.rank()), &-&cd.c(1))?;
        let lhs = ring.multiply(&td, &e)?;
        t.case(lhs == dual_of(&td), || format!("fails for {label}"));
    }
    Ok(())
}

fn chi_zeta_hrr(kt: &KTheory, cases: usize, rng: &mut impl Rng, t: &mut Tally) -> Result<()> {
    let m = kt.ring().matroid();
    for _ in 0..cases {
        let d = random_divisor(m, rng, 4);
        check_chi_pair(kt, &d, t)?;
    }
    Ok(())
}

fn check_chi_pair(kt: &KTheory, d: &DivisorClass, t: &mut Tally) -> Result<()> {
    let m = kt.ring().matroid();
    let hrr = kt.chi_hrr_divisor(d)?;
    match kt.chi_zeta(d) {
        Ok(z) => t.case(z == hrr && z.is_integer(), || {
            format!("D = {}: zeta gives {z}, HRR gives {hrr}", render_divisor(m, d))
        }),
        Err(Error::NonIntegral) => t.case(false, || {
            format!("D = {} has no integral alpha_F expression", render_divisor(m, d))
        }),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn serre(kt: &KTheory, cases: usize, rng: &mut impl Rng, t: &mut Tally) -> Result<()> {
    let tm = kt.tangent_class()?;
    t.case(kt.serre_check(&tm)?, || "fails for T_M".into());
    t.case(kt.serre_check(&tm.dual())?, || "fails for Omega_M".into());
    for _ in 0..cases {
        let k = random_kclass(kt, rng)?;
        t.case(kt.serre_check(&k)?, || "fails for a random virtual sum of line bundles".into());
    }
    Ok(())
}

fn chow_polynomial(kt: &KTheory, t: &mut Tally) -> Result<()> {
    let by_euler = kt.chow_polynomial_by_euler()?;
    let dims: Vec<Q> = kt.ring().dims().iter().map(|&d| q(d as i64)).collect();
    t.case(by_euler == dims, || {
        let shown: Vec<String> = by_euler.iter().map(rational::render).collect();
        format!("Euler characteristics give {shown:?}, dimensions are {:?}", kt.ring().dims())
    });
    Ok(())
}

fn chi_minus_flat(kt: &KTheory, t: &mut Tally) -> Result<()> {
    let m = kt.ring().matroid();
    for f in m.flats().proper() {
        let d = DivisorClass::x(m, f.members)?.scale(&q(-1));
        let (z, h) = (kt.chi_zeta(&d)?, kt.chi_hrr_divisor(&d)?);
        t.case(z.is_zero() && h.is_zero(), || format!("chi(-x_{f}): zeta {z}, HRR {h}"));
    }
    Ok(())
}

fn zeta_extreme_flats(kt: &KTheory, t: &mut Tally) -> Result<()> {
    let ring = kt.ring();
    let m = ring.matroid();
    let r = m.rank();
    for f in m.flats().proper() {
        let x = ring.x(f.members)?;
        let d = DivisorClass::x(m, f.members)?;
        if f.rank == 1 {
            let z = kt.zeta(&d.scale(&q(-1)))?;
            t.case(z == &ring.one() - &x, || format!("zeta(-x_{f}) != 1 - x_{f}"));
        }
        if f.rank + 1 == r {
            let z = kt.zeta(&d)?;
            t.case(z == &ring.one() + &x, || format!("zeta(x_{f}) != 1 + x_{f}"));
        }
    }
    Ok(())
}

fn nonempty_subsets(m: &Matroid, cap: usize) -> Vec<Mask> {
    let total = (1usize << m.n()) - 1;
    let step = stride(total, cap);
    (1..=total as Mask).step_by(step).collect()
}

fn zeta_alpha_beta(kt: &KTheory, opts: &SuiteOptions, t: &mut Tally) -> Result<()> {
    let ring = kt.ring();
    let m = ring.matroid();
    for s in nonempty_subsets(m, opts.max_cases) {
        let a = DivisorClass::alpha_s(m, s)?;
        let z = kt.zeta(&a.scale(&q(-1)))?;
        t.case(z == &ring.one() - &ring.divisor(&a)?, || format!("zeta(-alpha_S) != 1 - alpha_S for S = {}", render_set(s)));
        let b = DivisorClass::beta_s(m, s)?;
        let z = kt.zeta(&b)?;
        t.case(z == &ring.one() + &ring.divisor(&b)?, || format!("zeta(beta_S) != 1 + beta_S for S = {}", render_set(s)));
    }
    Ok(())
}

fn tensor_mul(s: &FlatSplit, a: &Tensor, b: &Tensor) -> Result<Tensor> {
    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
    for (l1, r1) in &a.terms {
        for (l2, r2) in &b.terms {
            terms.push((s.left.multiply(l1, l2)?, s.right.multiply(r1, r2)?));
        }
    }
    Ok(Tensor {
        left_ring: a.left_ring,
        right_ring: a.right_ring,
        terms,
    })
}

/// `psi(phi(a)) = x_F a`, `phi(psi(t)) = phi(x_F) t`, and
/// `deg(x_F a) = (deg ⊗ deg)(phi(a))`.
fn phi_psi(ring: &ChowRing, opts: &SuiteOptions, t: &mut Tally) -> Result<()> {
    let m = ring.matroid();
    let proper = m.flats().proper();
    let top = ring.top_degree();
    let mut budget = opts.max_cases;
    for f in proper {
        let s = ring.split(f.members)?;
        let x = ring.x(f.members)?;
        let phi_x = ring.pullback_phi(&s, &x)?;
        for d in 0..=top {
            for p in 0..ring.dim(d) {
                if budget == 0 {
                    return Ok(());
                }
                budget -= 1;
                let a = ring.basis_element(d, p);
                let phi_a = ring.pullback_phi(&s, &a)?;
                let back = ring.pushforward_psi(&s, &phi_a)?;
                let xa = ring.multiply(&x, &a)?;
                t.case(back == xa, || format!("F = {f}: psi(phi(a)) != x_F a for a = {}", ring.monomial_key(ring.basis_monomial(d, p))));
                if d + 1 == top {
                    let (tl, tr) = (s.left.top_degree(), s.right.top_degree());
                    let top_part = Tensor {
                        left_ring: phi_a.left_ring,
                        right_ring: phi_a.right_ring,
                        terms: phi_a
                            .terms
                            .iter()
                            .map(|(l, r)| (l.homogeneous_part(tl), r.homogeneous_part(tr)))
                            .collect(),
                    };
                    let lhs = ring.degree(&xa)?;
                    let rhs = ring.tensor_degree(&s, &top_part)?;
                    t.case(lhs == rhs, || format!("F = {f}: deg(x_F a) = {lhs}, split degree {rhs}"));
                }
            }
        }
        for dl in 0..=s.left.top_degree() {
            for pl in 0..s.left.dim(dl) {
                for dr in 0..=s.right.top_degree() {
                    for pr in 0..s.right.dim(dr) {
                        if budget == 0 {
                            return Ok(());
                        }
                        budget -= 1;
                        let tt = Tensor {
                            left_ring: s.left.id(),
                            right_ring: s.right.id(),
                            terms: vec![(s.left.basis_element(dl, pl), s.right.basis_element(dr, pr))],
                        };
                        let lhs = ring.pullback_phi(&s, &ring.pushforward_psi(&s, &tt)?)?;
                        let rhs = tensor_mul(&s, &phi_x, &tt)?;
                        t.case(lhs.coefficients() == rhs.coefficients(), || {
                            format!("F = {f}: phi(psi(t)) != phi(x_F) t at basis tensor ({dl},{pl}) ⊗ ({dr},{pr})")
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// `deg_M(theta_i a) = deg(a)` off coloops, `deg_M(alpha theta_i a) = deg(a)` on them.
fn theta_degree(ring: &ChowRing, opts: &SuiteOptions, t: &mut Tally) -> Result<()> {
    let m = ring.matroid();
    if m.n() < 2 {
        return Ok(());
    }
    for i in 1..=m.n() {
        let small_m = m.delete(i)?;
        if small_m.rank() == 0 {
            continue;
        }
        let small = ChowRing::build(&small_m)?;
        let coloop = m.is_coloop(i)?;
        let zero = ring.deletion_theta(i, &small, &small.zero())?;
        t.case(zero.is_zero(), || format!("theta_{i}(0) != 0"));
        let st = small.top_degree();
        let monos = small.chain_monomials(st);
        for mono in monos.iter().step_by(stride(monos.len(), opts.max_cases / m.n().max(1))) {
            let a = small.monomial(mono);
            let mut img = ring.deletion_theta(i, &small, &a)?;
            if coloop {
                img = ring.multiply(&img, &ring.alpha())?;
            }
            let (lhs, rhs) = (ring.degree(&img)?, small.degree(&a)?);
            t.case(lhs == rhs, || {
                format!("i = {i}{}: degree {lhs} after theta, {rhs} before, monomial {}", if coloop { " (coloop)" } else { "" }, small.monomial_key(mono))
            });
        }
    }
    Ok(())
}

/// The composite of deletions over `E \ S` carries `beta` of `M \ (E \ S)` to `beta_S`.
fn theta_beta(ring: &ChowRing, opts: &SuiteOptions, t: &mut Tally) -> Result<()> {
    let m = ring.matroid();
    let full = m.ground_mask();
    let cap = opts.max_cases.min(24);
    // rings of M with a set of elements deleted, keyed by that set
    let mut cache: HashMap<Mask, ChowRing> = HashMap::new();
    for s in nonempty_subsets(m, cap) {
        let removed: Vec<usize> = elements(full & !s);
        // delete the largest elements first so smaller labels stay put;
        // stage j has removed[j..] deleted
        let stage_mask = |j: usize| removed[j..].iter().fold(0, |acc, &e| acc | 1 << (e - 1));
        for j in (0..removed.len()).rev() {
            let key = stage_mask(j);
            if !cache.contains_key(&key) {
                let prev = if j + 1 < removed.len() {
                    cache[&stage_mask(j + 1)].matroid().clone()
                } else {
                    m.clone()
                };
                cache.insert(key, ChowRing::build(&prev.delete(removed[j])?)?);
            }
        }
        let stage = |j: usize| -> &ChowRing {
            if j == removed.len() {
                ring
            } else {
                &cache[&stage_mask(j)]
            }
        };
        let mut x = stage(0).beta();
        for (j, &e) in removed.iter().enumerate() {
            x = stage(j + 1).deletion_theta(e, stage(j), &x)?;
        }
        let expect = ring.beta_s(s)?;
        t.case(x == expect, || format!("S = {}: theta image of beta differs from beta_S", render_set(s)));
    }
    Ok(())
}

/// All multisets of `len` nonempty subsets, in lexicographic order of masks.
fn subset_multisets(n: usize, len: usize) -> Vec<Vec<Mask>> {
    let full = (1u32 << n) - 1;
    let mut out = Vec::new();
    let mut cur: Vec<Mask> = Vec::with_capacity(len);
    fn rec(full: Mask, len: usize, from: Mask, cur: &mut Vec<Mask>, out: &mut Vec<Vec<Mask>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for s in from..=full {
            cur.push(s);
            rec(full, len, s, cur, out);
            cur.pop();
        }
    }
    rec(full, len, 1, &mut cur, &mut out);
    out
}

fn multiset_count(n: usize, len: usize) -> u128 {
    // C(2^n - 1 + len - 1, len)
    let k = (1u128 << n) - 1;
    (0..len as u128).fold(1u128, |acc, i| acc * (k + i) / (i + 1))
}

fn dhr_alpha_beta(ring: &ChowRing, opts: &SuiteOptions, t: &mut Tally) -> Result<()> {
    let m = ring.matroid();
    let len = ring.top_degree();
    if len == 0 || multiset_count(m.n(), len) > 200_000 {
        return Ok(());
    }
    let all = subset_multisets(m.n(), len);
    let step = stride(all.len(), opts.max_cases);
    for sets in all.iter().step_by(step) {
        match beta_product_positive(ring, sets) {
            Ok(_) => t.case(true, String::new),
            Err(Error::Internal(msg)) => t.case(false, || msg),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn chi_beta_multiple(kt: &KTheory, k: i64) -> Result<Q> {
    let m = kt.ring().matroid();
    kt.chi_zeta(&DivisorClass::beta(m).scale(&q(k)))
}

/// `chi(M, -j beta) = chi(M \ i, -j beta) - sum_{k<=j} chi(M_i, -k beta)`
/// for `i` neither loop nor coloop with `M_i` loopless.
fn deletion_contraction(kt: &KTheory, max_j: i64, t: &mut Tally) -> Result<()> {
    let m = kt.ring().matroid();
    if m.rank() < 2 {
        return Ok(());
    }
    for i in 1..=m.n() {
        if m.is_coloop(i)? || m.closure(1 << (i - 1)).members != 1 << (i - 1) {
            continue;
        }
        let del_ring = ChowRing::build(&m.delete(i)?)?;
        let con_ring = ChowRing::build(&m.contract_element(i)?)?;
        let (del, con) = (KTheory::new(&del_ring)?, KTheory::new(&con_ring)?);
        for j in 1..=max_j {
            let lhs = chi_beta_multiple(kt, -j)?;
            let mut rhs = chi_beta_multiple(&del, -j)?;
            for k in 1..=j {
                rhs -= chi_beta_multiple(&con, -k)?;
            }
            t.case(lhs == rhs, || format!("i = {i}, j = {j}: {lhs} != {rhs}"));
        }
    }
    Ok(())
}

/// `chi(k beta_S) = chi(k beta)` on the restriction to `S`.
fn chi_beta_restriction(kt: &KTheory, opts: &SuiteOptions, t: &mut Tally) -> Result<()> {
    let m = kt.ring().matroid();
    for s in nonempty_subsets(m, opts.max_cases.min(32)) {
        let sub = m.restrict(s)?;
        let sub_ring = ChowRing::build(&sub)?;
        let sub_kt = KTheory::new(&sub_ring)?;
        let bs = DivisorClass::beta_s(m, s)?;
        for k in -3..=3 {
            let lhs = kt.chi_zeta(&bs.scale(&q(k)))?;
            let rhs = chi_beta_multiple(&sub_kt, k)?;
            t.case(lhs == rhs, || format!("S = {}, k = {k}: {lhs} != {rhs}", render_set(s)));
        }
    }
    Ok(())
}

/// `B = n beta - sum a_i x_{F_i}` over rank-one flats with full-rank complement:
/// `chi(-B) = chi(-n beta) - sum chi(-a_i beta) + sum chi(-a_i beta_{E \ F_i})`.
fn b_decomposition(kt: &KTheory, opts: &SuiteOptions, t: &mut Tally) -> Result<()> {
    let m = kt.ring().matroid();
    let r = m.rank();
    let flats: Vec<Mask> = m
        .flats()
        .by_rank(1)
        .iter()
        .map(|f| f.members)
        .filter(|&f| m.rank_of(m.ground_mask() & !f) == r)
        .collect();
    if flats.is_empty() {
        return Ok(());
    }
    let mut budget = opts.max_cases.min(60);
    // subsets of at most three flats, weights 1..=2, slack 0..=1
    for sel in 1u32..(1 << flats.len()) {
        if popcount(sel) > 3 {
            continue;
        }
        let chosen: Vec<Mask> = (0..flats.len()).filter(|i| sel >> i & 1 == 1).map(|i| flats[i]).collect();
        for wsel in 0u32..(1 << chosen.len()) {
            let a: Vec<i64> = (0..chosen.len()).map(|i| 1 + (wsel >> i & 1) as i64).collect();
            for slack in 0..=1 {
                if budget == 0 {
                    return Ok(());
                }
                budget -= 1;
                let n = a.iter().sum::<i64>() + slack;
                let mut b = DivisorClass::beta(m).scale(&q(n));
                for (&f, &ai) in chosen.iter().zip(&a) {
                    b = b.sub(&DivisorClass::x(m, f)?.scale(&q(ai)));
                }
                let lhs = kt.chi_zeta(&b.scale(&q(-1)))?;
                let mut rhs = chi_beta_multiple(kt, -n)?;
                for (&f, &ai) in chosen.iter().zip(&a) {
                    rhs -= chi_beta_multiple(kt, -ai)?;
                    let bs = DivisorClass::beta_s(m, m.ground_mask() & !f)?;
                    rhs += kt.chi_zeta(&bs.scale(&q(-ai)))?;
                }
                t.case(lhs == rhs, || format!("B = {}: {lhs} != {rhs}", render_divisor(m, &b)));
            }
        }
    }
    Ok(())
}

fn render_flag(f: &Flag) -> String {
    let parts: Vec<String> = f.flats.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(" < "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_small_matroids() {
        let opts = SuiteOptions {
            random_cases: 5,
            max_cases: 200,
            ..Default::default()
        };
        for m in [
            Matroid::uniform(3, 4).unwrap(),
            Matroid::uniform(2, 3).unwrap(),
            Matroid::uniform(1, 3).unwrap(),
            Matroid::boolean(3).unwrap(),
            Matroid::from_bases(4, &[vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]]).unwrap(),
        ] {
            let ring = ChowRing::build(&m).unwrap();
            let out = run_suite(&ring, &opts).unwrap();
            assert_eq!(out.len(), IDENTITY_NAMES.len());
            for o in &out {
                assert!(o.passed, "{} on {:?}: {:?}", o.name, m, o.witness);
            }
        }
    }

    #[test]
    fn multisets() {
        assert_eq!(subset_multisets(2, 2).len(), 6);
        assert_eq!(multiset_count(2, 2), 6);
        assert_eq!(multiset_count(4, 2), 120);
    }

    #[test]
    fn unknown_identity() {
        let ring = ChowRing::build(&Matroid::uniform(2, 3).unwrap()).unwrap();
        let kt = KTheory::new(&ring).unwrap();
        assert!(run_one("nope", &kt, &SuiteOptions::default()).is_err());
    }
}
