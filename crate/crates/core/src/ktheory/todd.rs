//! Todd classes: the universal series in Chern data, and the factored
//! form for the tangent class.

use super::{apply_series, chern_tm, chern_to_ch, ChernData};
use crate::chow::{ChowElement, ChowRing};
use crate::error::{Error, Result};
use crate::rational::{factorial, Q};
use crate::series::Series;

/// `td = exp(sum_k a_k p_k)` where `log(t / (1 - e^{-t})) = sum_k a_k t^k`
/// and `p_k = k! ch_k` are the power sums of the Chern roots.
pub fn todd(ring: &ChowRing, cd: &ChernData) -> Result<ChowElement> {
    let r = ring.rank();
    let a = Series::todd(r).log();
    let ch = chern_to_ch(ring, cd)?.ch;
    let mut x = ring.zero();
    for k in 1..r {
        let pk = ch.homogeneous_part(k).scale(&factorial(k as u32));
        x = &x + &pk.scale(&a.coeff(k));
    }
    apply_series(ring, &Series::exponential(r), &x)
}

/// `prod Q(t_i)` over the `2r - 1` factors `S_i` (`0 < i < r`) and
/// `alpha - sum_{j <= i} S_j` (`0 <= i < r`), `Q(t) = t / (1 - e^{-t})`.
pub fn todd_tm_product(ring: &ChowRing) -> Result<ChowElement> {
    let r = ring.rank();
    let q = Series::todd(r);
    let mut factors = Vec::new();
    for i in 1..r {
        factors.push(ring.s_k(i)?);
    }
    let mut cur = ring.alpha();
    factors.push(cur.clone());
    for i in 1..r {
        cur = &cur - &ring.s_k(i)?;
        factors.push(cur.clone());
    }
    let mut out = ring.one();
    for t in &factors {
        out = ring.multiply(&out, &apply_series(ring, &q, t)?)?;
    }
    Ok(out)
}

/// Todd class of `T_M`; both evaluations must agree.
pub fn todd_tm(ring: &ChowRing) -> Result<ChowElement> {
    let universal = todd(ring, &chern_tm(ring)?)?;
    let product = todd_tm_product(ring)?;
    if universal != product {
        return Err(Error::Internal(
            "Todd class of the tangent class: universal and factored forms disagree".into(),
        ));
    }
    Ok(universal)
}

/// Coefficient of `t^k` in `t / (1 - e^{-t})`, exposed for reports.
pub fn todd_series_coefficient(k: usize) -> Q {
    Series::todd(k + 1).coeff(k)
}
