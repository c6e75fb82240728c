//! Graded ℚ-dimension tables and the arithmetic needed for Künneth products, ℚ-acyclicity,
//! Bieri–Stallings groups and Euler characteristics of HNN splittings.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// A dimension: finite, countably infinite, or not determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DimValue {
    Finite(u64),
    Infinite,
    Unknown,
}

impl DimValue {
    pub const ZERO: DimValue = DimValue::Finite(0);

    pub fn is_zero(self) -> bool {
        self == DimValue::ZERO
    }

    pub fn add(self, other: DimValue) -> DimValue {
        use DimValue::*;
        match (self, other) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (Infinite, _) | (_, Infinite) => Infinite,
            (Finite(a), Finite(b)) => a.checked_add(b).map_or(Infinite, Finite),
        }
    }

    /// Cardinal product; zero annihilates even unknown values.
    pub fn mul(self, other: DimValue) -> DimValue {
        use DimValue::*;
        match (self, other) {
            _ if self.is_zero() || other.is_zero() => Self::ZERO,
            (Unknown, _) | (_, Unknown) => Unknown,
            (Infinite, _) | (_, Infinite) => Infinite,
            (Finite(a), Finite(b)) => a.checked_mul(b).map_or(Infinite, Finite),
        }
    }

    fn to_json(self) -> Value {
        match self {
            DimValue::Finite(n) => json!(n),
            DimValue::Infinite => json!("inf"),
            DimValue::Unknown => json!("unknown"),
        }
    }

    fn from_json(v: &Value) -> Result<DimValue> {
        match v {
            Value::Number(n) => n.as_u64().map(DimValue::Finite).ok_or_else(|| Error::Config(format!("bad dimension {n}"))),
            Value::String(s) if s == "inf" => Ok(DimValue::Infinite),
            Value::String(s) if s == "unknown" => Ok(DimValue::Unknown),
            other => Err(Error::Config(format!("bad dimension {other}"))),
        }
    }
}

impl fmt::Display for DimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimValue::Finite(n) => write!(f, "{n}"),
            DimValue::Infinite => write!(f, "inf"),
            DimValue::Unknown => write!(f, "?"),
        }
    }
}

/// Value of every degree not listed explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    Zero,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDim {
    dims: BTreeMap<u32, DimValue>,
    default: Tail,
}

impl GradedDim {
    /// Finitely supported table: degree `i` has `values[i]`, everything above is zero.
    pub fn finite(values: &[DimValue]) -> GradedDim {
        GradedDim::with_tail(values, Tail::Zero)
    }

    pub fn with_tail(values: &[DimValue], tail: Tail) -> GradedDim {
        let mut g = GradedDim { dims: BTreeMap::new(), default: tail };
        for (d, &v) in values.iter().enumerate() {
            g.set(d as u32, v);
        }
        g
    }

    pub fn from_counts(values: &[u64]) -> GradedDim {
        GradedDim::finite(&values.iter().map(|&v| DimValue::Finite(v)).collect::<Vec<_>>())
    }

    /// `ℚ` in degree 0.
    pub fn unit() -> GradedDim {
        GradedDim::from_counts(&[1])
    }

    pub fn tail(&self) -> Tail {
        self.default
    }

    fn tail_value(&self) -> DimValue {
        match self.default {
            Tail::Zero => DimValue::ZERO,
            Tail::Unknown => DimValue::Unknown,
        }
    }

    pub fn get(&self, d: u32) -> DimValue {
        self.dims.get(&d).copied().unwrap_or_else(|| self.tail_value())
    }

    pub fn set(&mut self, d: u32, v: DimValue) {
        if v == self.tail_value() {
            self.dims.remove(&d);
        } else {
            self.dims.insert(d, v);
        }
    }

    /// One past the largest explicitly listed degree.
    pub fn support_bound(&self) -> u32 {
        self.dims.keys().next_back().map_or(0, |d| d + 1)
    }

    pub fn is_identically_zero(&self) -> bool {
        self.default == Tail::Zero && self.dims.values().all(|v| v.is_zero())
    }

    pub fn to_json(&self) -> Value {
        let dims: Map<String, Value> = self.dims.iter().map(|(d, v)| (d.to_string(), v.to_json())).collect();
        let default = match self.default {
            Tail::Zero => json!(0),
            Tail::Unknown => json!("unknown"),
        };
        json!({"dims": dims, "default": default})
    }

    pub fn from_json(v: &Value) -> Result<GradedDim> {
        let default = match v.get("default") {
            None => Tail::Zero,
            Some(Value::Number(n)) if n.as_u64() == Some(0) => Tail::Zero,
            Some(Value::String(s)) if s == "unknown" => Tail::Unknown,
            Some(other) => return Err(Error::Config(format!("default must be 0 or \"unknown\", got {other}"))),
        };
        let mut g = GradedDim { dims: BTreeMap::new(), default };
        let dims = v.get("dims").and_then(Value::as_object).ok_or_else(|| Error::Config("missing `dims` object".into()))?;
        for (k, val) in dims {
            let d: u32 = k.parse().map_err(|_| Error::Config(format!("degree `{k}` is not a natural")))?;
            g.set(d, DimValue::from_json(val)?);
        }
        Ok(g)
    }
}

impl fmt::Display for GradedDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = (0..self.support_bound()).map(|d| self.get(d).to_string()).collect();
        let tail = match self.default {
            Tail::Zero => "0",
            Tail::Unknown => "?",
        };
        write!(f, "[{}{}{tail}, ...]", items.join(", "), if items.is_empty() { "" } else { ", " })
    }
}

/// Convolution `c_n = Σ_p a_p b_{n-p}` in cardinal arithmetic.
pub fn kunneth(a: &GradedDim, b: &GradedDim) -> GradedDim {
    if a.is_identically_zero() || b.is_identically_zero() {
        return GradedDim::finite(&[]);
    }
    let default = if a.default == Tail::Zero && b.default == Tail::Zero { Tail::Zero } else { Tail::Unknown };
    let mut c = GradedDim { dims: BTreeMap::new(), default };
    for n in 0..a.support_bound() + b.support_bound() {
        let mut acc = DimValue::ZERO;
        for p in 0..=n {
            acc = acc.add(a.get(p).mul(b.get(n - p)));
        }
        c.set(n, acc);
    }
    c
}

/// `dH_0 = 1` and every other degree known to be zero.
pub fn is_q_acyclic(a: &GradedDim) -> bool {
    a.default == Tail::Zero
        && a.get(0) == DimValue::Finite(1)
        && (1..a.support_bound()).all(|d| a.get(d).is_zero())
}

/// Dimensions of `dH_*(SB_n, ℚ)` for a ℚ-acyclic `U`: `ℚ` in degree 0, countably infinite
/// in degree `n + 1`, zero above, and unknown in degrees `1..=n`.
pub fn sb_homology(n: u32) -> GradedDim {
    let mut values = vec![DimValue::Finite(1)];
    values.extend(std::iter::repeat(DimValue::Unknown).take(n as usize));
    values.push(DimValue::Infinite);
    GradedDim::finite(&values)
}

/// `χ(U) - |X| χ(O)` for an HNN splitting with `|X|` stable letters.
pub fn hnn_euler(chi_u: Ratio<i64>, chi_o: Ratio<i64>, stable_letters: u32) -> Ratio<i64> {
    chi_u - Ratio::from_integer(stable_letters as i64) * chi_o
}

/// Alternating sum, when every degree is finite and the table is finitely supported.
pub fn euler_characteristic(a: &GradedDim) -> Option<i64> {
    if a.default != Tail::Zero {
        return None;
    }
    let mut chi: i64 = 0;
    for d in 0..a.support_bound() {
        match a.get(d) {
            DimValue::Finite(v) => {
                let v = i64::try_from(v).ok()?;
                chi = if d % 2 == 0 { chi.checked_add(v)? } else { chi.checked_sub(v)? };
            }
            _ => return None,
        }
    }
    Some(chi)
}
