//! Loopless matroids on at most twelve elements, their lattices of flats,
//! minors, and the flag-counting functions used by the degree formulas.
//!
//! Subsets are bitmasks: bit `i` stands for element `i + 1`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mask = u32;

/// All flat enumeration is explicit, so the ground set is capped.
pub const MAX_ELEMENTS: usize = 12;

pub fn popcount(m: Mask) -> usize {
    m.count_ones() as usize
}

pub fn full_mask(n: usize) -> Mask {
    if n == 0 {
        0
    } else {
        (1 << n) - 1
    }
}

pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

/// Elements (1-based, ascending) of a mask.
pub fn elements(m: Mask) -> Vec<usize> {
    (0..32).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Mask of a list of 1-based elements, checking bounds.
pub fn mask_of(elems: &[usize], n: usize) -> Result<Mask> {
    let mut m = 0;
    for &e in elems {
        if e == 0 || e > n {
            return Err(Error::InvalidArgument(format!(
                "element {e} outside ground set 1..={n}"
            )));
        }
        m |= 1 << (e - 1);
    }
    Ok(m)
}

/// Packs the bits of `m` selected by `support` into the low bits.
pub fn compress(m: Mask, support: Mask) -> Mask {
    let mut out = 0;
    let mut j = 0;
    for i in 0..32 {
        if support >> i & 1 == 1 {
            if m >> i & 1 == 1 {
                out |= 1 << j;
            }
            j += 1;
        }
    }
    out
}

/// Inverse of [`compress`].
pub fn expand(m: Mask, support: Mask) -> Mask {
    let mut out = 0;
    let mut j = 0;
    for i in 0..32 {
        if support >> i & 1 == 1 {
            if m >> j & 1 == 1 {
                out |= 1 << i;
            }
            j += 1;
        }
    }
    out
}

pub fn render_set(m: Mask) -> String {
    let parts: Vec<String> = elements(m).iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatroid("ground set must be nonempty".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::Capacity {
                what: "ground set size",
                count: n,
                limit: MAX_ELEMENTS,
            });
        }
        Ok(GroundSet { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mask(&self) -> Mask {
        full_mask(self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    pub rank: usize,
    pub members: Mask,
}

impl Flat {
    pub fn elements(&self) -> Vec<usize> {
        elements(self.members)
    }

    pub fn is_below(&self, other: &Flat) -> bool {
        self.members != other.members && is_subset(self.members, other.members)
    }

    pub fn comparable(&self, other: &Flat) -> bool {
        is_subset(self.members, other.members) || is_subset(other.members, self.members)
    }
}

impl fmt::Display for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_set(self.members))
    }
}

/// Flats grouped by rank. Proper nonempty flats also get a dense index,
/// ordered by `(rank, members)`, which every downstream table uses.
#[derive(Debug, Clone)]
pub struct FlatLattice {
    flats_by_rank: Vec<Vec<Flat>>,
    proper: Vec<Flat>,
    index: HashMap<Mask, usize>,
    /// For each proper flat, the proper flats strictly above it.
    above: Vec<Vec<usize>>,
}

impl FlatLattice {
    pub fn by_rank(&self, k: usize) -> &[Flat] {
        self.flats_by_rank.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn all(&self) -> impl Iterator<Item = &Flat> {
        self.flats_by_rank.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.flats_by_rank.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Proper nonempty flats in index order.
    pub fn proper(&self) -> &[Flat] {
        &self.proper
    }

    pub fn proper_index(&self, members: Mask) -> Option<usize> {
        self.index.get(&members).copied()
    }

    pub fn above(&self, id: usize) -> &[usize] {
        &self.above[id]
    }

    pub fn contains(&self, members: Mask) -> bool {
        self.flats_by_rank.iter().flatten().any(|f| f.members == members)
    }
}

#[derive(Debug, Clone)]
enum RankRule {
    Uniform { r: usize },
    Table(Vec<u8>),
}

/// A loopless matroid. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Matroid {
    ground: GroundSet,
    rank: usize,
    rule: RankRule,
    lattice: FlatLattice,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground
            && (0..=self.ground.mask()).all(|s| self.rank_of(s) == other.rank_of(s))
    }
}

impl Eq for Matroid {}

impl Matroid {
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        if r == 0 {
            return Err(Error::InvalidMatroid(
                "rank 0 matroids consist of loops".into(),
            ));
        }
        if r > n {
            return Err(Error::InvalidMatroid(format!("U_{{{r},{n}}} needs r <= n")));
        }
        Self::finish(ground, RankRule::Uniform { r })
    }

    /// The free matroid, where every subset is a flat.
    pub fn boolean(n: usize) -> Result<Self> {
        Self::uniform(n, n)
    }

    /// Builds from a list of bases (1-based elements). Rank is the maximum
    /// intersection with a basis.
    pub fn from_bases(n: usize, bases: &[Vec<usize>]) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        if bases.is_empty() {
            return Err(Error::InvalidMatroid("no bases given".into()));
        }
        let masks = bases
            .iter()
            .map(|b| {
                let m = mask_of(b, n).map_err(|e| Error::InvalidMatroid(e.to_string()))?;
                if popcount(m) != b.len() {
                    return Err(Error::InvalidMatroid(format!("repeated element in basis {b:?}")));
                }
                Ok(m)
            })
            .collect::<Result<BTreeSet<Mask>>>()?;
        let r = popcount(*masks.iter().next().unwrap());
        if masks.iter().any(|&b| popcount(b) != r) {
            return Err(Error::InvalidMatroid("bases have different sizes".into()));
        }
        let table = (0..=ground.mask())
            .map(|s| masks.iter().map(|&b| popcount(s & b)).max().unwrap() as u8)
            .collect();
        let rule = RankRule::Table(table);
        check_rank_axioms(ground, &rule)?;
        Self::finish(ground, rule)
    }

    /// Builds from an explicit rank table indexed by mask.
    pub fn from_rank_table(n: usize, table: Vec<u8>) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        if table.len() != 1 << n {
            return Err(Error::InvalidMatroid("rank table has wrong length".into()));
        }
        let rule = RankRule::Table(table);
        check_rank_axioms(ground, &rule)?;
        Self::finish(ground, rule)
    }

    fn finish(ground: GroundSet, rule: RankRule) -> Result<Self> {
        let rank_fn = |s: Mask| rule_rank(&rule, s);
        for i in 0..ground.len() {
            if rank_fn(1 << i) == 0 {
                return Err(Error::InvalidMatroid(format!("element {} is a loop", i + 1)));
            }
        }
        let rank = rank_fn(ground.mask());
        let lattice = enumerate_flats(ground, rank, &rank_fn);
        Ok(Matroid {
            ground,
            rank,
            rule,
            lattice,
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ground_mask(&self) -> Mask {
        self.ground.mask()
    }

    pub fn rank_of(&self, s: Mask) -> usize {
        rule_rank(&self.rule, s & self.ground.mask())
    }

    pub fn closure(&self, s: Mask) -> Flat {
        let rk = self.rank_of(s);
        let mut members = s;
        for i in 0..self.n() {
            let bit = 1 << i;
            if members & bit == 0 && self.rank_of(s | bit) == rk {
                members |= bit;
            }
        }
        Flat { rank: rk, members }
    }

    pub fn is_flat(&self, s: Mask) -> bool {
        self.closure(s).members == s
    }

    /// The flat with the given members, or `NotAFlat`.
    pub fn flat(&self, s: Mask) -> Result<Flat> {
        let f = self.closure(s);
        if f.members != s {
            return Err(Error::NotAFlat(elements(s)));
        }
        Ok(f)
    }

    pub fn flats(&self) -> &FlatLattice {
        &self.lattice
    }

    pub fn is_uniform_rule(&self) -> bool {
        matches!(self.rule, RankRule::Uniform { .. })
    }

    /// Contracts `lower` and restricts to `upper`; the ground set
    /// `upper \ lower` is relabeled in increasing order.
    pub fn minor(&self, lower: &Flat, upper: &Flat) -> Result<Matroid> {
        if !lower.is_below(upper) {
            return Err(Error::InvalidArgument(format!(
                "minor needs {lower} strictly inside {upper}"
            )));
        }
        self.flat(lower.members)?;
        self.flat(upper.members)?;
        let support = upper.members & !lower.members;
        let m = popcount(support);
        let base = self.rank_of(lower.members);
        let table = (0..(1u32 << m))
            .map(|t| (self.rank_of(expand(t, support) | lower.members) - base) as u8)
            .collect();
        Matroid::finish(GroundSet::new(m)?, RankRule::Table(table))
    }

    /// Contraction `M_F`.
    pub fn contract_flat(&self, f: &Flat) -> Result<Matroid> {
        self.minor(f, &self.top())
    }

    /// Restriction `M^F`.
    pub fn restrict_flat(&self, f: &Flat) -> Result<Matroid> {
        self.minor(&self.bottom(), f)
    }

    /// Restriction to an arbitrary nonempty subset (relabeled).
    pub fn restrict(&self, s: Mask) -> Result<Matroid> {
        let s = s & self.ground_mask();
        let m = popcount(s);
        let ground = GroundSet::new(m)?;
        let table = (0..(1u32 << m))
            .map(|t| self.rank_of(expand(t, s)) as u8)
            .collect();
        Matroid::finish(ground, RankRule::Table(table))
    }

    /// Deletion of the 1-based element `i`.
    pub fn delete(&self, i: usize) -> Result<Matroid> {
        let bit = mask_of(&[i], self.n())?;
        if self.n() == 1 {
            return Err(Error::InvalidArgument("deletion would empty the ground set".into()));
        }
        self.restrict(self.ground_mask() & !bit)
    }

    /// Contraction of the single element `i`; fails if it creates loops.
    pub fn contract_element(&self, i: usize) -> Result<Matroid> {
        let bit = mask_of(&[i], self.n())?;
        let support = self.ground_mask() & !bit;
        let m = popcount(support);
        let ground = GroundSet::new(m)?;
        let table = (0..(1u32 << m))
            .map(|t| (self.rank_of(expand(t, support) | bit) - 1) as u8)
            .collect();
        Matroid::finish(ground, RankRule::Table(table))
    }

    pub fn is_coloop(&self, i: usize) -> Result<bool> {
        let bit = mask_of(&[i], self.n())?;
        Ok(self.rank_of(self.ground_mask() & !bit) + 1 == self.rank)
    }

    pub fn bottom(&self) -> Flat {
        Flat { rank: 0, members: 0 }
    }

    pub fn top(&self) -> Flat {
        Flat {
            rank: self.rank,
            members: self.ground_mask(),
        }
    }

    /// All flags of proper nonempty flats, the empty flag first.
    pub fn all_flags(&self) -> Vec<Flag> {
        let mut out = vec![Flag::empty()];
        let proper = self.lattice.proper();
        let mut stack: Vec<Vec<usize>> = (0..proper.len()).map(|i| vec![i]).collect();
        stack.reverse();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().unwrap();
            out.push(Flag {
                flats: chain.iter().map(|&i| proper[i]).collect(),
            });
            for &next in self.lattice.above(last).iter().rev() {
                let mut c = chain.clone();
                c.push(next);
                stack.push(c);
            }
        }
        out
    }

    /// Complete flags (one flat of each rank `1..r`).
    pub fn complete_flags(&self) -> Vec<Flag> {
        let r = self.rank;
        self.all_flags()
            .into_iter()
            .filter(|f| f.len() + 1 == r)
            .collect()
    }

    /// `N_{F,I}`: flags with rank set exactly `ranks`, disjoint from `flag`,
    /// whose union with `flag` is again a flag.
    pub fn count_flags(&self, flag: &Flag, ranks: &[usize]) -> Result<u64> {
        self.count_flags_impl(flag, ranks, None)
    }

    /// `N_{F,I,s}`: as [`Self::count_flags`], with the top flat avoiding `s`.
    pub fn count_flags_avoiding(&self, flag: &Flag, ranks: &[usize], s: usize) -> Result<u64> {
        let bit = mask_of(&[s], self.n())?;
        self.count_flags_impl(flag, ranks, Some(bit))
    }

    fn count_flags_impl(&self, flag: &Flag, ranks: &[usize], avoid: Option<Mask>) -> Result<u64> {
        flag.validate(self)?;
        let ranks: BTreeSet<usize> = ranks.iter().copied().collect();
        if ranks.iter().any(|&k| k == 0 || k >= self.rank) {
            return Err(Error::InvalidArgument(format!(
                "rank set {ranks:?} must lie in 1..{}",
                self.rank
            )));
        }
        let ranks: Vec<usize> = ranks.into_iter().collect();
        Ok(self.count_rec(flag, &ranks, 0, 0, avoid))
    }

    fn count_rec(&self, flag: &Flag, ranks: &[usize], pos: usize, prev: Mask, avoid: Option<Mask>) -> u64 {
        if pos == ranks.len() {
            return 1;
        }
        let last = pos + 1 == ranks.len();
        self.lattice
            .by_rank(ranks[pos])
            .iter()
            .filter(|g| is_subset(prev, g.members))
            .filter(|g| flag.flats.iter().all(|f| f.members != g.members && f.comparable(g)))
            .filter(|g| !last || avoid.is_none_or(|a| g.members & a == 0))
            .map(|g| self.count_rec(flag, ranks, pos + 1, g.members, avoid))
            .sum()
    }

    /// `rk(union of S_i, i in I) >= 1 + |I|` for every nonempty `I`.
    pub fn dragon_hall_rado(&self, sets: &[Mask]) -> Result<bool> {
        if let Some(i) = sets.iter().position(|&s| s & self.ground_mask() == 0) {
            return Err(Error::InvalidArgument(format!("set #{} is empty", i + 1)));
        }
        let m = sets.len();
        if m > 20 {
            return Err(Error::Capacity {
                what: "dragon-Hall-Rado sequence length",
                count: m,
                limit: 20,
            });
        }
        Ok((1u32..(1 << m)).all(|sel| {
            let union = (0..m)
                .filter(|i| sel >> i & 1 == 1)
                .fold(0, |acc, i| acc | sets[i]);
            self.rank_of(union) > popcount(sel)
        }))
    }
}

/// A strictly increasing chain of proper nonempty flats.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    pub flats: Vec<Flat>,
}

impl Flag {
    pub fn empty() -> Self {
        Flag { flats: Vec::new() }
    }

    /// Validates nesting and that every member is a proper nonempty flat.
    pub fn new(m: &Matroid, sets: &[Mask]) -> Result<Self> {
        let flats = sets.iter().map(|&s| m.flat(s)).collect::<Result<Vec<_>>>()?;
        let flag = Flag { flats };
        flag.validate(m)?;
        Ok(flag)
    }

    pub fn validate(&self, m: &Matroid) -> Result<()> {
        for f in &self.flats {
            if !m.is_flat(f.members) {
                return Err(Error::NotAFlat(f.elements()));
            }
            if f.members == 0 || f.members == m.ground_mask() {
                return Err(Error::InvalidArgument(format!("{f} is not a proper nonempty flat")));
            }
        }
        for w in self.flats.windows(2) {
            if !w[0].is_below(&w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "flag is not nested at {} / {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// `F` is not in the flag and is comparable with all its members.
    pub fn can_insert(&self, f: &Flat) -> bool {
        self.flats.iter().all(|g| g.members != f.members && g.comparable(f))
    }
}

fn rule_rank(rule: &RankRule, s: Mask) -> usize {
    match rule {
        RankRule::Uniform { r } => popcount(s).min(*r),
        RankRule::Table(t) => t[s as usize] as usize,
    }
}

fn check_rank_axioms(ground: GroundSet, rule: &RankRule) -> Result<()> {
    let n = ground.len();
    let rk = |s: Mask| rule_rank(rule, s);
    if rk(0) != 0 {
        return Err(Error::InvalidMatroid("rank of the empty set is not 0".into()));
    }
    for s in 0..=ground.mask() {
        for i in 0..n {
            let bi = 1 << i;
            if s & bi != 0 {
                continue;
            }
            let d = rk(s | bi) as i64 - rk(s) as i64;
            if !(0..=1).contains(&d) {
                return Err(Error::InvalidMatroid(format!(
                    "rank jumps by {d} when adding {} to {}",
                    i + 1,
                    render_set(s)
                )));
            }
            for j in (i + 1)..n {
                let bj = 1 << j;
                if s & bj != 0 {
                    continue;
                }
                if rk(s | bi) + rk(s | bj) < rk(s | bi | bj) + rk(s) {
                    return Err(Error::InvalidMatroid(format!(
                        "submodularity fails at {} with {} and {}",
                        render_set(s),
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

fn enumerate_flats(ground: GroundSet, rank: usize, rk: &dyn Fn(Mask) -> usize) -> FlatLattice {
    let closure = |s: Mask| {
        let r = rk(s);
        (0..ground.len())
            .map(|i| 1 << i)
            .filter(|&b| rk(s | b) == r)
            .fold(s, |acc, b| acc | b)
    };
    let mut flats_by_rank: Vec<Vec<Flat>> = vec![vec![Flat { rank: 0, members: 0 }]];
    for k in 0..rank {
        let mut next = BTreeSet::new();
        for f in &flats_by_rank[k] {
            for i in 0..ground.len() {
                let b = 1 << i;
                if f.members & b == 0 {
                    next.insert(closure(f.members | b));
                }
            }
        }
        flats_by_rank.push(
            next.into_iter()
                .map(|members| Flat { rank: k + 1, members })
                .collect(),
        );
    }
    let proper: Vec<Flat> = flats_by_rank
        .iter()
        .take(rank)
        .skip(1)
        .flatten()
        .copied()
        .collect();
    let index = proper
        .iter()
        .enumerate()
        .map(|(i, f)| (f.members, i))
        .collect();
    let above = proper
        .iter()
        .map(|f| {
            proper
                .iter()
                .enumerate()
                .filter(|(_, g)| f.is_below(g))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    FlatLattice {
        flats_by_rank,
        proper,
        index,
        above,
    }
}

/// JSON description of a matroid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MatroidSpec {
    Uniform { r: usize, n: usize },
    Boolean { n: usize },
    Bases { n: usize, bases: Vec<Vec<usize>> },
}

impl MatroidSpec {
    pub fn build(&self) -> Result<Matroid> {
        match self {
            MatroidSpec::Uniform { r, n } => Matroid::uniform(*r, *n),
            MatroidSpec::Boolean { n } => Matroid::boolean(*n),
            MatroidSpec::Bases { n, bases } => Matroid::from_bases(*n, bases),
        }
    }

    pub fn label(&self) -> String {
        match self {
            MatroidSpec::Uniform { r, n } => format!("U{r},{n}"),
            MatroidSpec::Boolean { n } => format!("B{n}"),
            MatroidSpec::Bases { n, bases } => format!("bases(n={n},#B={})", bases.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(r: usize, n: usize) -> Matroid {
        Matroid::uniform(r, n).unwrap()
    }

    fn set(e: &[usize]) -> Mask {
        mask_of(e, 12).unwrap()
    }

    #[test]
    fn uniform_rank() {
        let m = u(3, 4);
        assert_eq!(m.rank_of(set(&[1, 2])), 2);
        assert_eq!(m.rank_of(0), 0);
        assert_eq!(m.rank_of(set(&[1, 2, 3, 4])), 3);
    }

    #[test]
    fn closure_examples() {
        let m = u(2, 3);
        assert_eq!(m.closure(set(&[1])).members, set(&[1]));
        assert_eq!(m.closure(set(&[1, 2])).members, set(&[1, 2, 3]));
        assert_eq!(m.closure(m.ground_mask()).members, m.ground_mask());
    }

    #[test]
    fn flats_of_uniform_and_boolean() {
        let m = u(3, 4);
        assert_eq!(m.flats().by_rank(1).len(), 4);
        assert_eq!(m.flats().by_rank(2).len(), 6);
        assert_eq!(m.flats().by_rank(3).len(), 1);
        assert_eq!(m.flats().by_rank(0).len(), 1);
        let m = u(2, 3);
        let r1: Vec<Mask> = m.flats().by_rank(1).iter().map(|f| f.members).collect();
        assert_eq!(r1, vec![set(&[1]), set(&[2]), set(&[3])]);
        let b = Matroid::boolean(3).unwrap();
        assert_eq!(b.flats().proper().len(), 6);
    }

    #[test]
    fn uniform_flat_counts_are_binomial() {
        for n in 1..=7 {
            for r in 1..=n {
                let m = u(r, n);
                for k in 0..r {
                    let expect = (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
                    assert_eq!(m.flats().by_rank(k).len(), expect, "U{r},{n} rank {k}");
                }
            }
        }
    }

    #[test]
    fn minors() {
        let m = u(3, 4);
        let f12 = m.flat(set(&[1, 2])).unwrap();
        let f1 = m.flat(set(&[1])).unwrap();
        assert_eq!(m.minor(&m.bottom(), &f12).unwrap(), u(2, 2));
        assert_eq!(m.minor(&f1, &m.top()).unwrap(), u(2, 3));
        assert_eq!(m.minor(&m.bottom(), &m.top()).unwrap(), m);
        assert!(m.minor(&f12, &f1).is_err());
    }

    #[test]
    fn deletion() {
        assert_eq!(u(3, 4).delete(4).unwrap(), u(3, 3));
        assert_eq!(u(2, 3).delete(1).unwrap(), u(2, 2));
        assert_eq!(
            Matroid::boolean(3).unwrap().delete(3).unwrap(),
            Matroid::boolean(2).unwrap()
        );
        assert!(u(1, 1).delete(1).is_err());
    }

    #[test]
    fn coloops() {
        assert!(u(3, 3).is_coloop(1).unwrap());
        assert!(!u(3, 4).is_coloop(1).unwrap());
        assert!(!u(1, 2).is_coloop(2).unwrap());
    }

    #[test]
    fn flag_counts() {
        let m = u(3, 4);
        let e = Flag::empty();
        assert_eq!(m.count_flags(&e, &[1]).unwrap(), 4);
        assert_eq!(m.count_flags(&e, &[1, 2]).unwrap(), 12);
        assert_eq!(m.count_flags(&e, &[]).unwrap(), 1);
        assert_eq!(m.count_flags_avoiding(&e, &[1], 1).unwrap(), 3);
        assert_eq!(m.count_flags_avoiding(&e, &[], 1).unwrap(), 1);
        assert_eq!(m.count_flags_avoiding(&e, &[2], 1).unwrap(), 3);
    }

    #[test]
    fn flag_counts_with_fixed_flag() {
        let m = u(3, 4);
        let f = Flag::new(&m, &[set(&[1])]).unwrap();
        // rank-2 flats through element 1
        assert_eq!(m.count_flags(&f, &[2]).unwrap(), 3);
        assert_eq!(m.count_flags(&f, &[1]).unwrap(), 0);
        let bad = Flag {
            flats: vec![Flat { rank: 2, members: set(&[1, 2, 3]) }],
        };
        assert!(matches!(m.count_flags(&bad, &[1]), Err(Error::NotAFlat(_))));
    }

    #[test]
    fn dhr_examples() {
        let m = u(3, 4);
        assert!(m.dragon_hall_rado(&[set(&[1, 2]), set(&[3, 4])]).unwrap());
        assert!(!m.dragon_hall_rado(&[set(&[1]), set(&[1])]).unwrap());
        assert!(m.dragon_hall_rado(&[set(&[1, 2])]).unwrap());
        assert!(m.dragon_hall_rado(&[0]).is_err());
    }

    #[test]
    fn loops_and_bad_bases_rejected() {
        assert!(Matroid::from_bases(3, &[vec![1, 2]]).is_err()); // 3 is a loop
        // not a matroid: bases {1,2},{3,4} violate exchange
        assert!(Matroid::from_bases(4, &[vec![1, 2], vec![3, 4]]).is_err());
        assert!(Matroid::uniform(0, 3).is_err());
        assert!(Matroid::uniform(2, 13).is_err());
    }

    #[test]
    fn bases_matroid_matches_uniform() {
        let bases: Vec<Vec<usize>> = (1..=4)
            .flat_map(|a| ((a + 1)..=4).map(move |b| vec![a, b]))
            .collect();
        assert_eq!(Matroid::from_bases(4, &bases).unwrap(), u(2, 4));
    }

    #[test]
    fn flag_enumeration() {
        let m = u(3, 4);
        // empty + 10 singletons + 12 two-chains
        assert_eq!(m.all_flags().len(), 23);
        assert_eq!(m.complete_flags().len(), 12);
    }

    #[test]
    fn compress_expand_roundtrip() {
        let support = set(&[2, 4, 5, 9]);
        for t in 0..16 {
            assert_eq!(compress(expand(t, support), support), t);
        }
    }
}
