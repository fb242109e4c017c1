use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SurgeryError;

/// A surgery slope `p/q` in lowest terms with `q >= 0`; `1/0` is the
/// meridian (trivial filling).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    pub fn new(p: i64, q: i64) -> Result<Slope, SurgeryError> {
        if p == 0 && q == 0 {
            return Err(SurgeryError::BadSlope("0/0".into()));
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn integer(p: i64) -> Slope {
        Slope { p, q: 1 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = SurgeryError;

    fn from_str(s: &str) -> Result<Slope, SurgeryError> {
        let s = s.trim();
        let bad = || SurgeryError::BadSlope(s.to_string());
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Slope::INFINITY);
        }
        match s.split_once('/') {
            Some((p, q)) => Slope::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => Ok(Slope::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// A surgery coefficient: a slope, or `*` for a component left as a cusp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Filled(Slope),
    Unfilled,
}

impl Coefficient {
    pub fn slope(&self) -> Option<Slope> {
        match self {
            Coefficient::Filled(s) => Some(*s),
            Coefficient::Unfilled => None,
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Filled(s) => s.fmt(f),
            Coefficient::Unfilled => f.write_str("*"),
        }
    }
}

impl FromStr for Coefficient {
    type Err = SurgeryError;

    fn from_str(s: &str) -> Result<Self, SurgeryError> {
        if s.trim() == "*" {
            Ok(Coefficient::Unfilled)
        } else {
            s.parse().map(Coefficient::Filled)
        }
    }
}

impl From<Slope> for Coefficient {
    fn from(s: Slope) -> Self {
        Coefficient::Filled(s)
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(Slope);
string_serde!(Coefficient);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(Slope::new(4, -6).unwrap(), Slope::new(-2, 3).unwrap());
        assert_eq!(Slope::new(-3, 0).unwrap(), Slope::INFINITY);
        assert_eq!(Slope::new(0, -5).unwrap(), Slope::integer(0));
        assert!(Slope::new(0, 0).is_err());
        assert_eq!("-1/3".parse::<Slope>().unwrap().to_string(), "-1/3");
        assert_eq!("7".parse::<Slope>().unwrap(), Slope::integer(7));
        assert_eq!("*".parse::<Coefficient>().unwrap(), Coefficient::Unfilled);
        assert!("1/x".parse::<Slope>().is_err());
    }
}
