//! Additive weight functions `wt(e) = Σ wt'(e_i)` with `wt'(0) = 0`.
//!
//! Per-symbol weights may be arbitrary nonnegative rationals. They are kept
//! internally as integers over a common denominator ("units") so that sphere
//! counts can be indexed by exact weight values.

use std::fmt;
use std::path::Path;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FieldElement, FqVector, PrimeField};

/// An exact vector weight.
pub type Weight = Ratio<u64>;

const MAX_DENOMINATOR: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Lee,
    Hamming,
    Custom,
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightKind::Lee => "lee",
            WeightKind::Hamming => "hamming",
            WeightKind::Custom => "custom",
        })
    }
}

/// Per-symbol weight table over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction {
    field: PrimeField,
    units: Vec<u32>,
    denom: u32,
    kind: WeightKind,
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    q: u32,
    table: Vec<f64>,
}

impl WeightFunction {
    /// Lee weight `min(x, q - x)`.
    pub fn lee(q: u32) -> Result<Self> {
        let field = PrimeField::new(q)?;
        Ok(WeightFunction {
            field,
            units: (0..q).map(|x| x.min(q - x)).collect(),
            denom: 1,
            kind: WeightKind::Lee,
        })
    }

    /// Hamming weight: 1 for every nonzero symbol.
    pub fn hamming(q: u32) -> Result<Self> {
        let field = PrimeField::new(q)?;
        Ok(WeightFunction {
            field,
            units: (0..q).map(|x| u32::from(x != 0)).collect(),
            denom: 1,
            kind: WeightKind::Hamming,
        })
    }

    /// A custom table; `table[x]` is the weight of symbol `x`.
    pub fn custom(q: u32, table: &[f64]) -> Result<Self> {
        let field = PrimeField::new(q)?;
        if table.len() != q as usize {
            return Err(Error::InvalidWeightTable(format!(
                "expected {q} entries, got {}",
                table.len()
            )));
        }
        if table[0] != 0.0 {
            return Err(Error::InvalidWeightTable(format!(
                "weight of the zero symbol must be 0, got {}",
                table[0]
            )));
        }
        if let Some(bad) = table.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidWeightTable(format!(
                "weights must be finite and nonnegative, got {bad}"
            )));
        }
        if table.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidWeightTable(
                "at least one symbol needs positive weight".into(),
            ));
        }
        let mut denom: u64 = 1;
        for &v in table {
            let r = Ratio::<i64>::approximate_float(v).ok_or_else(|| {
                Error::InvalidWeightTable(format!("{v} has no rational approximation"))
            })?;
            denom = denom.lcm(&(*r.denom() as u64));
            if denom > MAX_DENOMINATOR {
                return Err(Error::InvalidWeightTable(format!(
                    "common denominator exceeds {MAX_DENOMINATOR}"
                )));
            }
        }
        let units = table
            .iter()
            .map(|&v| {
                let u = (v * denom as f64).round();
                if (u / denom as f64 - v).abs() > 1e-9 || u > u32::MAX as f64 {
                    Err(Error::InvalidWeightTable(format!("cannot represent {v} exactly")))
                } else {
                    Ok(u as u32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightFunction {
            field,
            units,
            denom: denom as u32,
            kind: WeightKind::Custom,
        })
    }

    /// Parses `{"q": 7, "table": [0, 1, 2, 3, 3, 2, 1]}`.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TableDoc = serde_json::from_str(s)?;
        WeightFunction::custom(doc.q, &doc.table)
    }

    pub fn to_json(&self) -> String {
        let doc = TableDoc {
            q: self.q(),
            table: (0..self.q()).map(|x| self.symbol_weight(x as FieldElement)).collect(),
        };
        serde_json::to_string(&doc).expect("table serializes")
    }

    /// `lee`, `hamming`, or a path to a JSON table. The table's own `q` must
    /// match `q`.
    pub fn from_spec(spec: &str, q: u32) -> Result<Self> {
        match spec {
            "lee" => WeightFunction::lee(q),
            "hamming" => WeightFunction::hamming(q),
            path => {
                let wf = WeightFunction::from_json(&std::fs::read_to_string(Path::new(path))?)?;
                if wf.q() != q {
                    return Err(Error::InvalidWeightTable(format!(
                        "table is for q={}, expected q={q}",
                        wf.q()
                    )));
                }
                Ok(wf)
            }
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.order() as u32
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// Common denominator of the table.
    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// Symbol weights as integers over [`WeightFunction::denom`].
    pub fn units(&self) -> &[u32] {
        &self.units
    }

    #[inline]
    pub fn symbol_units(&self, x: FieldElement) -> u32 {
        self.units[x as usize]
    }

    pub fn symbol_weight(&self, x: FieldElement) -> f64 {
        self.units[x as usize] as f64 / self.denom as f64
    }

    pub fn max_units(&self) -> u32 {
        *self.units.iter().max().expect("q >= 2")
    }

    /// `max_x wt'(x)`; `⌊q/2⌋` for Lee, 1 for Hamming.
    pub fn max_weight(&self) -> f64 {
        self.max_units() as f64 / self.denom as f64
    }

    /// Average symbol weight under the uniform distribution, where the
    /// sphere exponent reaches 1. For Lee this is `(q²-1)/(4q)`.
    pub fn mean_weight(&self) -> f64 {
        self.units.iter().map(|&u| u as f64).sum::<f64>() / (self.denom as f64 * self.q() as f64)
    }

    /// Weights as `f64`, indexed by symbol.
    pub fn table(&self) -> Vec<f64> {
        self.units
            .iter()
            .map(|&u| u as f64 / self.denom as f64)
            .collect()
    }

    pub fn vector_units(&self, v: &FqVector) -> Result<u64> {
        if v.field() != self.field {
            return Err(Error::ModulusMismatch {
                left: self.field.order(),
                right: v.field().order(),
            });
        }
        Ok(self.units_of_slice(v.entries()))
    }

    #[inline]
    pub(crate) fn units_of_slice(&self, v: &[FieldElement]) -> u64 {
        v.iter().map(|&x| self.units[x as usize] as u64).sum()
    }

    /// Exact weight `Σ wt'(v_i)`.
    pub fn vector_weight(&self, v: &FqVector) -> Result<Weight> {
        Ok(self.weight_from_units(self.vector_units(v)?))
    }

    pub fn weight_from_units(&self, units: u64) -> Weight {
        Ratio::new(units, self.denom as u64)
    }

    /// Converts a weight value to units, failing when it is not a multiple
    /// of `1/denom`.
    pub fn units_from_value(&self, w: f64) -> Result<u64> {
        let u = (w * self.denom as f64).round();
        if !w.is_finite() || w < 0.0 || (u / self.denom as f64 - w).abs() > 1e-9 {
            return Err(Error::InvalidParams(format!(
                "weight {w} is not a multiple of 1/{}",
                self.denom
            )));
        }
        Ok(u as u64)
    }

    /// `ω / max wt'`, mapping relative weights onto `[0, 1]`.
    pub fn normalized_weight(&self, omega: f64) -> f64 {
        omega / self.max_weight()
    }
}
