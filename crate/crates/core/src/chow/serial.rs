//! JSON form of a class: `{"x{1,2}^2*x{1,2,3}^1": "3/1", "1": "-1/1"}`.

use serde_json::{Map, Value};

use super::{ChowElement, ChowRing};
use crate::error::{Error, Result};
use crate::matroid::{mask_of, render_set};
use crate::rational::{self, Q};

impl ChowRing {
    pub fn monomial_key(&self, mono: &[u16]) -> String {
        if mono.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < mono.len() {
            let j = mono[i..].iter().take_while(|&&g| g == mono[i]).count();
            parts.push(format!("x{}^{}", render_set(self.flat_of(mono[i]).members), j));
            i += j;
        }
        parts.join("*")
    }

    pub fn element_to_json(&self, a: &ChowElement) -> Result<Value> {
        self.check(a)?;
        let mut map = Map::new();
        for (d, part) in a.parts.iter().enumerate() {
            for (p, c) in part.iter().enumerate() {
                if !num::Zero::is_zero(c) {
                    map.insert(self.monomial_key(self.basis_monomial(d, p)), rational::render(c).into());
                }
            }
        }
        Ok(Value::Object(map))
    }

    /// Parses a key like `x{1,2}^2*x{1,2,3}^1` into flat indices.
    pub fn parse_monomial_key(&self, key: &str) -> Result<Vec<u16>> {
        let key = key.trim();
        if key == "1" {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for factor in key.split('*') {
            let bad = || Error::parse(0, format!("malformed monomial factor `{factor}`"));
            let rest = factor.trim().strip_prefix("x{").ok_or_else(bad)?;
            let (set, exp) = rest.split_once('}').ok_or_else(bad)?;
            let exp: usize = match exp.strip_prefix('^') {
                Some(e) => e.parse().map_err(|_| bad())?,
                None if exp.is_empty() => 1,
                None => return Err(bad()),
            };
            let elems: Vec<usize> = if set.trim().is_empty() {
                Vec::new()
            } else {
                set.split(',')
                    .map(|s| s.trim().parse().map_err(|_| bad()))
                    .collect::<Result<_>>()?
            };
            let mask = mask_of(&elems, self.matroid.n())?;
            let id = self
                .matroid
                .flats()
                .proper_index(mask)
                .ok_or(Error::NotAFlat(elems))?;
            out.extend(std::iter::repeat_n(id as u16, exp));
        }
        Ok(out)
    }

    pub fn element_from_json(&self, v: &Value) -> Result<ChowElement> {
        let map = v
            .as_object()
            .ok_or_else(|| Error::parse(0, "class must be a JSON object"))?;
        let mut out = self.zero();
        for (k, c) in map {
            let c: Q = match c {
                Value::String(s) => rational::parse(s)?,
                Value::Number(n) => rational::parse(&n.to_string())?,
                _ => return Err(Error::parse(0, format!("coefficient of `{k}` is not a rational"))),
            };
            let mono = self.parse_monomial_key(k)?;
            out = &out + &self.monomial(&mono).scale(&c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Matroid;

    #[test]
    fn round_trip() {
        let ring = ChowRing::build(&Matroid::uniform(3, 4).unwrap()).unwrap();
        let a = &ring.alpha() + &ring.one();
        let sq = ring.multiply(&a, &ring.beta()).unwrap();
        for e in [a, sq, ring.zero()] {
            let j = ring.element_to_json(&e).unwrap();
            assert_eq!(ring.element_from_json(&j).unwrap(), e);
        }
        assert_eq!(ring.monomial_key(&[0, 0, 4]), "x{1}^2*x{1,2}^1");
        assert!(ring.parse_monomial_key("x{1,2,3}^1").is_err());
    }
}
