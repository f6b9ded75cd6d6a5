use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FieldElement, FqMatrix, FqVector};
use crate::sphere::SphereTable;
use crate::weight::{Weight, WeightFunction, WeightKind};

/// A syndrome decoding instance: find `e` with `H e = s` and `wt(e) = w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdInstance {
    wf: WeightFunction,
    n: usize,
    k: usize,
    w_units: u64,
    h: FqMatrix,
    s: FqVector,
    planted: Option<FqVector>,
}

impl SdInstance {
    /// Validates shapes, `rank(H) = n - k`, and the planted solution if any.
    pub fn new(
        wf: WeightFunction,
        h: FqMatrix,
        s: FqVector,
        w: Weight,
        planted: Option<FqVector>,
    ) -> Result<Self> {
        let f = wf.field();
        if h.field() != f || s.field() != f {
            return Err(Error::ModulusMismatch {
                left: f.order(),
                right: if h.field() != f { h.field().order() } else { s.field().order() },
            });
        }
        let (n, r) = (h.cols(), h.rows());
        if r == 0 || r >= n {
            return Err(Error::InvalidParams(format!(
                "need 0 < k < n, got n={n}, k={}",
                n as i64 - r as i64
            )));
        }
        if s.len() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                actual: s.len(),
            });
        }
        if h.rank() != r {
            return Err(Error::InvalidParams("H does not have full row rank".into()));
        }
        let scaled = w * wf.denom() as u64;
        if !scaled.is_integer() {
            return Err(Error::InvalidParams(format!(
                "w = {w} is not a multiple of 1/{}",
                wf.denom()
            )));
        }
        let inst = SdInstance {
            n,
            k: n - r,
            w_units: scaled.to_integer(),
            wf,
            h,
            s,
            planted: None,
        };
        if let Some(e) = &planted {
            if !inst.verify_solution(e) {
                return Err(Error::InvalidParams(
                    "planted vector does not solve the instance".into(),
                ));
            }
        }
        Ok(SdInstance { planted, ..inst })
    }

    pub fn weight_function(&self) -> &WeightFunction {
        &self.wf
    }

    pub fn q(&self) -> u32 {
        self.wf.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn w(&self) -> Weight {
        self.wf.weight_from_units(self.w_units)
    }

    /// Target weight in units of `1/denom`.
    pub fn w_units(&self) -> u64 {
        self.w_units
    }

    pub fn h(&self) -> &FqMatrix {
        &self.h
    }

    pub fn s(&self) -> &FqVector {
        &self.s
    }

    pub fn planted(&self) -> Option<&FqVector> {
        self.planted.as_ref()
    }

    /// `H e = s` and `wt(e) = w`, exactly.
    pub fn verify_solution(&self, e: &FqVector) -> bool {
        if e.len() != self.n || e.field() != self.wf.field() {
            return false;
        }
        self.wf.vector_units(e).ok() == Some(self.w_units)
            && self.h.mul_vec(e).is_ok_and(|he| he == self.s)
    }

    pub fn to_json(&self) -> String {
        let doc = InstanceDoc {
            q: self.q(),
            n: self.n,
            k: self.k,
            w: WeightValue::from_units(&self.wf, self.w_units),
            weight: WeightSpec::from_wf(&self.wf),
            h: self.h.to_rows(),
            s: self.s.entries().to_vec(),
            e: self.planted.as_ref().map(|e| e.entries().to_vec()),
        };
        serde_json::to_string(&doc).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)?;
        let wf = match &doc.weight {
            WeightSpec::Name(name) if name == "lee" => WeightFunction::lee(doc.q)?,
            WeightSpec::Name(name) if name == "hamming" => WeightFunction::hamming(doc.q)?,
            WeightSpec::Name(other) => {
                return Err(Error::InvalidParams(format!("unknown weight {other:?}")))
            }
            WeightSpec::Table { table } => WeightFunction::custom(doc.q, table)?,
        };
        let f = wf.field();
        let rows: Vec<Vec<i64>> = doc
            .h
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        let h = FqMatrix::from_rows(f, &rows)?;
        if h.rows() + doc.k != doc.n || h.cols() != doc.n {
            return Err(Error::InvalidParams(format!(
                "H is {}x{}, expected {}x{}",
                h.rows(),
                h.cols(),
                doc.n - doc.k.min(doc.n),
                doc.n
            )));
        }
        let s = FqVector::new(f, doc.s)?;
        let planted = doc.e.map(|e| FqVector::new(f, e)).transpose()?;
        let w = wf.weight_from_units(wf.units_from_value(doc.w.value())?);
        SdInstance::new(wf, h, s, w, planted)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WeightSpec {
    Name(String),
    Table { table: Vec<f64> },
}

impl WeightSpec {
    fn from_wf(wf: &WeightFunction) -> Self {
        match wf.kind() {
            WeightKind::Lee => WeightSpec::Name("lee".into()),
            WeightKind::Hamming => WeightSpec::Name("hamming".into()),
            WeightKind::Custom => WeightSpec::Table { table: wf.table() },
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WeightValue {
    Int(u64),
    Real(f64),
}

impl WeightValue {
    fn from_units(wf: &WeightFunction, units: u64) -> Self {
        if units % wf.denom() as u64 == 0 {
            WeightValue::Int(units / wf.denom() as u64)
        } else {
            WeightValue::Real(units as f64 / wf.denom() as f64)
        }
    }

    fn value(&self) -> f64 {
        match *self {
            WeightValue::Int(v) => v as f64,
            WeightValue::Real(v) => v,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    q: u32,
    n: usize,
    k: usize,
    w: WeightValue,
    weight: WeightSpec,
    #[serde(rename = "H")]
    h: Vec<Vec<FieldElement>>,
    s: Vec<FieldElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e: Option<Vec<FieldElement>>,
}

/// Draws `H` uniformly among rank `n - k` matrices and `e` uniformly on the
/// weight-`w` sphere, and returns `(H, s = H e)` with `e` recorded.
pub fn generate_instance<R: Rng + ?Sized>(
    wf: &WeightFunction,
    n: usize,
    k: usize,
    w: Weight,
    rng: &mut R,
) -> Result<SdInstance> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParams(format!("need 0 < k < n, got n={n}, k={k}")));
    }
    let scaled = w * wf.denom() as u64;
    if !scaled.is_integer() {
        return Err(Error::EmptySphere {
            n,
            weight: w.to_string(),
        });
    }
    let table = SphereTable::new(wf, n, scaled.to_integer())?;
    let h = FqMatrix::random_full_rank(wf.field(), n - k, n, rng)?;
    let e = table.sample_vector(rng);
    let s = h.mul_vec(&e)?;
    SdInstance::new(wf.clone(), h, s, w, Some(e))
}
