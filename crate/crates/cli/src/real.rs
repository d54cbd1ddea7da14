use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer};

/// A real number that may also be written with `pi` and `e`, e.g. `pi/32`,
/// `1/e`, `2*pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

fn atom(s: &str) -> Result<f64, String> {
    match s.trim() {
        "pi" | "π" => Ok(std::f64::consts::PI),
        "e" => Ok(std::f64::consts::E),
        t => t.parse::<f64>().map_err(|_| format!("not a number: {t:?}")),
    }
}

fn product(s: &str) -> Result<f64, String> {
    s.split('*').map(atom).try_fold(1.0, |acc, v| v.map(|v| acc * v))
}

impl FromStr for Real {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split('/');
        let mut value = product(parts.next().unwrap_or(""))?;
        for d in parts {
            value /= product(d)?;
        }
        Ok(Real(value))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Real(v)),
            Raw::Int(v) => Ok(Real(v as f64)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
