use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Serialize, Serializer};

use crate::arith::Tower;
use crate::error::{Error, Result};

/// Base rings: ℚ, ℚ(√m), or a finite product of those.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseRing {
    Rationals,
    RealQuadratic(BigInt),
    Product(Vec<BaseRing>),
}

impl BaseRing {
    pub fn product(factors: Vec<BaseRing>) -> Result<BaseRing> {
        if factors.len() < 2 {
            return Err(Error::Parse("a product needs at least two factors".into()));
        }
        if factors.iter().any(|f| matches!(f, BaseRing::Product(_))) {
            return Err(Error::Parse("product factors must be fields".into()));
        }
        Ok(BaseRing::Product(factors))
    }

    pub fn factors(&self) -> Vec<&BaseRing> {
        match self {
            BaseRing::Product(fs) => fs.iter().collect(),
            other => vec![other],
        }
    }

    /// The tower ℚ or ℚ(√m) of a field factor.
    pub fn tower(&self) -> Result<Arc<Tower>> {
        match self {
            BaseRing::Rationals => Ok(Tower::rationals()),
            BaseRing::RealQuadratic(m) => Tower::new(Some(m.clone()), None),
            BaseRing::Product(_) => Err(Error::UnsupportedBase("product has no single tower".into())),
        }
    }

    pub fn orderings(&self) -> Vec<Ordering> {
        self.factors()
            .into_iter()
            .enumerate()
            .flat_map(|(c, f)| field_orderings(f, c))
            .collect()
    }
}

pub(crate) fn field_orderings(f: &BaseRing, component: usize) -> Vec<Ordering> {
    match f {
        BaseRing::Rationals => vec![Ordering::new(component, 1)],
        BaseRing::RealQuadratic(m) if m.is_positive() => {
            vec![Ordering::new(component, 1), Ordering::new(component, -1)]
        }
        _ => Vec::new(),
    }
}

/// An ordering of the base: the component of the product plus the sign given
/// to √m (always + over ℚ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordering {
    pub component: usize,
    pub embedding_sign: i8,
}

impl Ordering {
    pub fn new(component: usize, embedding_sign: i8) -> Self {
        Ordering { component, embedding_sign: if embedding_sign < 0 { -1 } else { 1 } }
    }

    pub fn key(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.embedding_sign < 0 { '-' } else { '+' };
        write!(f, "{}/{}", self.component, s)
    }
}

impl FromStr for Ordering {
    type Err = Error;
    fn from_str(s: &str) -> Result<Ordering> {
        let (c, e) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("ordering {s:?} is not of the form c/±")))?;
        let component = c
            .parse()
            .map_err(|_| Error::Parse(format!("bad ordering component in {s:?}")))?;
        let embedding_sign = match e {
            "+" => 1,
            "-" => -1,
            _ => return Err(Error::Parse(format!("bad embedding sign in {s:?}"))),
        };
        Ok(Ordering { component, embedding_sign })
    }
}

impl Serialize for Ordering {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_counts() {
        assert_eq!(BaseRing::Rationals.orderings(), vec![Ordering::new(0, 1)]);
        let q2 = BaseRing::RealQuadratic(2.into());
        assert_eq!(q2.orderings().len(), 2);
        assert!(BaseRing::RealQuadratic((-5).into()).orderings().is_empty());
        let p = BaseRing::product(vec![BaseRing::Rationals, q2]).unwrap();
        let keys: Vec<String> = p.orderings().iter().map(Ordering::key).collect();
        assert_eq!(keys, ["0/+", "1/+", "1/-"]);
    }

    #[test]
    fn ordering_parse() {
        assert_eq!("1/-".parse::<Ordering>().unwrap(), Ordering::new(1, -1));
        assert!("1".parse::<Ordering>().is_err());
    }
}
