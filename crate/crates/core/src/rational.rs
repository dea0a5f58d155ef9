//! Exact rational scalars and their canonical text form.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Renders as `p/q`, always with an explicit denominator.
pub fn render(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `p/q` or a bare integer.
pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::parse(0, format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn factorial(n: u32) -> Q {
    (1..=n as i64).fold(one(), |acc, k| acc * q(k))
}

pub fn binomial(n: i64, k: i64) -> Q {
    if k < 0 || n < 0 || k > n {
        return zero();
    }
    let mut acc = one();
    for i in 0..k {
        acc = acc * q(n - i) / q(i + 1);
    }
    acc
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

/// Field operations that may report overflow, so exact algorithms can run
/// on machine-word rationals first and fall back to big rationals.
pub(crate) trait Coef: Clone + Zero + One + PartialOrd {
    fn from_i64(v: i64) -> Self;
    fn from_q(v: &Q) -> Option<Self>;
    fn sub_mul(&self, c: &Self, p: &Self) -> Option<Self>;
    fn mul_c(&self, o: &Self) -> Option<Self>;
    fn div_c(&self, o: &Self) -> Option<Self>;
    fn inv(&self) -> Option<Self>;
    fn neg_c(&self) -> Option<Self>;
    fn into_q(self) -> Q;
}

pub(crate) type Small = num::rational::Ratio<i64>;

impl Coef for Small {
    fn from_i64(v: i64) -> Self {
        Small::from_integer(v)
    }
    fn from_q(v: &Q) -> Option<Self> {
        Some(Small::new_raw(v.numer().to_i64()?, v.denom().to_i64()?))
    }
    fn sub_mul(&self, c: &Self, p: &Self) -> Option<Self> {
        use num::{CheckedMul, CheckedSub};
        self.checked_sub(&c.checked_mul(p)?)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        num::CheckedMul::checked_mul(self, o)
    }
    fn div_c(&self, o: &Self) -> Option<Self> {
        num::CheckedDiv::checked_div(self, o)
    }
    fn inv(&self) -> Option<Self> {
        (*self.numer() != i64::MIN).then(|| self.recip())
    }
    fn neg_c(&self) -> Option<Self> {
        (*self.numer() != i64::MIN).then(|| -*self)
    }
    fn into_q(self) -> Q {
        Q::new((*self.numer()).into(), (*self.denom()).into())
    }
}

impl Coef for Q {
    fn from_i64(v: i64) -> Self {
        Q::from_integer(v.into())
    }
    fn from_q(v: &Q) -> Option<Self> {
        Some(v.clone())
    }
    fn sub_mul(&self, c: &Self, p: &Self) -> Option<Self> {
        Some(self - c * p)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_c(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn inv(&self) -> Option<Self> {
        Some(self.recip())
    }
    fn neg_c(&self) -> Option<Self> {
        Some(-self)
    }
    fn into_q(self) -> Q {
        self
    }
}
