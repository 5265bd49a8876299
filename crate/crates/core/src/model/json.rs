//! The JSON system document.
//!
//! ```json
//! {"n": 2,
//!  "polynomials": [{"terms": [{"exponent": [4, 0], "re": "2", "im": "0"}, ...]}],
//!  "u": ["0.7", "1.1"],
//!  "seed": 42}
//! ```
//!
//! Coefficients are exact rational strings (`"p/q"` or an integer). The data
//! vector `u` holds decimal strings. Serialization emits terms sorted
//! lexicographically by exponent.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Coefficient, DataVector, Exponent, PolynomialSystem, RandomSeed, SparsePolynomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub n: usize,
    pub polynomials: Vec<PolynomialDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialDocument {
    pub terms: Vec<TermDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDocument {
    pub exponent: Vec<i64>,
    pub re: String,
    pub im: String,
}

/// A validated system document.
#[derive(Debug, Clone)]
pub struct ParsedSystem {
    pub system: PolynomialSystem,
    pub u: Option<DataVector>,
    pub seed: Option<RandomSeed>,
}

pub fn parse_system(text: &str) -> Result<ParsedSystem> {
    let doc: SystemDocument = serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    doc.validate()
}

impl SystemDocument {
    pub fn validate(&self) -> Result<ParsedSystem> {
        if self.polynomials.is_empty() {
            return Err(Error::EmptySystem);
        }
        let mut polynomials = Vec::with_capacity(self.polynomials.len());
        for (index, pd) in self.polynomials.iter().enumerate() {
            if pd.terms.is_empty() {
                return Err(Error::EmptySupport { index });
            }
            let mut seen = BTreeSet::new();
            let mut terms = Vec::with_capacity(pd.terms.len());
            for t in &pd.terms {
                if t.exponent.len() != self.n {
                    return Err(Error::DimensionMismatch {
                        index,
                        expected: self.n,
                        found: t.exponent.len(),
                    });
                }
                if let Some(&value) = t.exponent.iter().find(|&&e| e < 0) {
                    return Err(Error::NegativeExponent { index, value });
                }
                if !seen.insert(t.exponent.clone()) {
                    return Err(Error::DuplicateExponent {
                        index,
                        exponent: t.exponent.clone(),
                    });
                }
                let c = Coefficient::from_exact(parse_rational(&t.re)?, parse_rational(&t.im)?);
                if c.is_zero() {
                    return Err(Error::ZeroCoefficient {
                        index,
                        exponent: t.exponent.clone(),
                    });
                }
                terms.push((Exponent::new(t.exponent.clone()).expect("checked nonnegative"), c));
            }
            polynomials.push(SparsePolynomial::from_terms(self.n, terms));
        }
        let system = PolynomialSystem::new(self.n, polynomials)?;
        let u = match &self.u {
            None => None,
            Some(entries) => {
                if entries.len() != self.n {
                    return Err(Error::InvalidData(format!(
                        "u has {} entries, expected {}",
                        entries.len(),
                        self.n
                    )));
                }
                let values = entries.iter().map(|s| parse_decimal(s)).collect::<Result<Vec<_>>>()?;
                Some(DataVector::from_exact(values)?)
            }
        };
        Ok(ParsedSystem {
            system,
            u,
            seed: self.seed.map(RandomSeed),
        })
    }

    pub fn from_system(system: &PolynomialSystem, u: Option<&DataVector>, seed: Option<RandomSeed>) -> Self {
        let polynomials = system
            .polynomials()
            .iter()
            .map(|p| PolynomialDocument {
                terms: p
                    .terms()
                    .map(|(e, c)| {
                        let (re, im) = c.to_rationals();
                        TermDocument {
                            exponent: e.to_vec(),
                            re: format_rational(&re),
                            im: format_rational(&im),
                        }
                    })
                    .collect(),
            })
            .collect();
        SystemDocument {
            n: system.n(),
            polynomials,
            u: u.map(format_data),
            seed: seed.map(|s| s.0),
        }
    }
}

pub fn serialize_system(system: &PolynomialSystem, u: Option<&DataVector>, seed: Option<RandomSeed>) -> String {
    serde_json::to_string_pretty(&SystemDocument::from_system(system, u, seed)).expect("document serializes")
}

/// Parses `"p/q"` or an integer literal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(Error::InvalidNumber(s.to_string()));
    }
    BigRational::from_str(trimmed).map_err(|_| Error::InvalidNumber(s.to_string()))
}

/// Parses a decimal literal such as `0.7`, `-12`, `1.5e-3` exactly. A
/// `"p/q"` rational is accepted as well.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidNumber(s.to_string());
    let t = s.trim();
    if t.contains('/') {
        return parse_rational(t);
    }
    let (mantissa, exp10) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all_digits).map_err(|_| bad())?;
    let shift = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if shift >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-shift) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Terminating decimals are written exactly, anything else falls back to
/// the shortest round-tripping float.
fn format_decimal(r: &BigRational) -> Option<String> {
    let mut den = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = r.numer() * num_traits::pow(BigInt::from(10), places) / r.denom();
    let digits = scaled.abs().to_string();
    let sign = if scaled.is_negative() { "-" } else { "" };
    if places == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let padded = format!("{:0>width$}", digits, width = places + 1);
    let (i, f) = padded.split_at(padded.len() - places);
    Some(format!("{sign}{i}.{f}"))
}

fn format_data(u: &DataVector) -> Vec<String> {
    match &u.exact {
        Some(exact) => exact
            .iter()
            .zip(&u.values)
            .map(|(r, v)| format_decimal(r).unwrap_or_else(|| v.to_string()))
            .collect(),
        None => u.values.iter().map(|v| v.to_string()).collect(),
    }
}
