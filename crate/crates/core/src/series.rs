//! Truncated univariate power series over `Q`.

use num::{One, Zero};

use crate::rational::{factorial, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series(pub Vec<Q>);

impl Series {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.0.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn mul(&self, o: &Series) -> Series {
        let n = self.len().min(o.len());
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.0.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        Series(out)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inv(&self) -> Series {
        let n = self.len();
        let a0 = self.0[0].clone();
        assert!(!a0.is_zero(), "series with zero constant term has no inverse");
        let mut out = vec![Q::zero(); n];
        out[0] = Q::one() / &a0;
        for k in 1..n {
            let s = (1..=k).fold(Q::zero(), |acc, i| acc + &self.0[i] * &out[k - i]);
            out[k] = -s / &a0;
        }
        Series(out)
    }

    pub fn derivative(&self) -> Series {
        let mut v: Vec<Q> = (1..self.len())
            .map(|k| &self.0[k] * Q::from_integer((k as i64).into()))
            .collect();
        v.push(Q::zero());
        Series(v)
    }

    pub fn integral(&self) -> Series {
        let mut v = vec![Q::zero()];
        v.extend(
            (0..self.len().saturating_sub(1)).map(|k| &self.0[k] / Q::from_integer((k as i64 + 1).into())),
        );
        Series(v)
    }

    /// `log f` for `f(0) = 1`, via `(log f)' = f'/f`.
    pub fn log(&self) -> Series {
        assert!(self.0[0].is_one(), "log needs constant term 1");
        self.derivative().mul(&self.inv()).integral()
    }

    /// `exp f` for `f(0) = 0`, via `g' = f' g`.
    pub fn exp(&self) -> Series {
        assert!(self.0[0].is_zero(), "exp needs constant term 0");
        let n = self.len();
        let mut g = vec![Q::zero(); n];
        g[0] = Q::one();
        for k in 1..n {
            // k g_k = sum_{i=1}^{k} i f_i g_{k-i}
            let s = (1..=k).fold(Q::zero(), |acc, i| {
                acc + Q::from_integer((i as i64).into()) * &self.0[i] * &g[k - i]
            });
            g[k] = s / Q::from_integer((k as i64).into());
        }
        Series(g)
    }

    /// `e^t` truncated to `n` terms.
    pub fn exponential(n: usize) -> Series {
        Series((0..n as u32).map(|k| Q::one() / factorial(k)).collect())
    }

    /// `t / (1 - e^{-t})` truncated to `n` terms.
    pub fn todd(n: usize) -> Series {
        // (1 - e^{-t}) / t = sum_k (-1)^k t^k / (k+1)!
        let denom = Series(
            (0..n as u32)
                .map(|k| {
                    let v = Q::one() / factorial(k + 1);
                    if k % 2 == 0 { v } else { -v }
                })
                .collect(),
        );
        denom.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn todd_coefficients() {
        let t = Series::todd(5);
        assert_eq!(t.0, vec![q(1), qf(1, 2), qf(1, 12), q(0), qf(-1, 720)]);
    }

    #[test]
    fn exp_log_inverse() {
        let e = Series::exponential(7);
        let mut x = vec![q(0); 7];
        x[1] = q(1);
        assert_eq!(e.log(), Series(x.clone()));
        assert_eq!(Series(x).exp(), e);
        let one_minus = Series(vec![q(1), q(-1), q(0), q(0)]);
        assert_eq!(one_minus.inv().0, vec![q(1); 4]);
        assert_eq!(one_minus.inv().mul(&one_minus).0, vec![q(1), q(0), q(0), q(0)]);
    }
}
