//! JSON files describing a datum with its linking and root vector parameters.
//!
//! ```json
//! {
//!   "group": "Z/11",
//!   "g": [[1], [1]],
//!   "chi": [[2], [9]],
//!   "cartan": [[2, 0], [0, 2]],
//!   "zeta_order": 11,
//!   "lambda": [{"i": 1, "j": 2, "value": "1"}],
//!   "mu": []
//! }
//! ```
//!
//! Group elements and characters are coordinate vectors for the cyclic factors as
//! written in `group`; the group is normalized to invariant factors on load. Vertex
//! indices are 1-based, roots are simple-root coordinates, and scalars are strings
//! "a0 + a1*z + ..." in Q(zeta_m) with m = `zeta_order` (default: the exponent of
//! the group).

use crate::datum::{validate_datum, validate_lambda, validate_mu, DatumError, Lambda, Mu};
use crate::groups::GroupError;
use crate::isomorphy::{IsoError, Triple};
use crate::scalars::ScalarError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
}

impl IoError {
    /// Whether the input was well-formed but the data are not admissible.
    pub fn is_admissibility(&self) -> bool {
        matches!(self, IoError::Datum(_) | IoError::BadVertex(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaEntry {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuEntry {
    pub root: Vec<i64>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleFile {
    pub group: String,
    pub g: Vec<Vec<i64>>,
    pub chi: Vec<Vec<i64>>,
    pub cartan: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_order: Option<u64>,
    #[serde(default)]
    pub lambda: Vec<LambdaEntry>,
    #[serde(default)]
    pub mu: Vec<MuEntry>,
}

impl TripleFile {
    /// Validates the datum and parameters.
    pub fn to_triple(&self) -> Result<Triple, IoError> {
        let norm = crate::groups::AbelianGroup::parse(&self.group)?;
        let g = self.g.iter().map(|c| norm.element(c)).collect::<Result<Vec<_>, _>>()?;
        let chi = self.chi.iter().map(|c| norm.character(c)).collect::<Result<Vec<_>, _>>()?;
        let mut datum = validate_datum(&norm.group, &g, &chi, &self.cartan)?;
        if let Some(m) = self.zeta_order {
            if m != datum.modulus() {
                datum = datum.with_field(m)?;
            }
        }
        let field = datum.field.clone();
        let mut lambda = Lambda::default();
        for e in &self.lambda {
            let theta = datum.theta();
            if e.i == 0 || e.j == 0 || e.i > theta || e.j > theta {
                return Err(IoError::BadVertex(e.i.max(e.j)));
            }
            let (i, j) = (e.i - 1, e.j - 1);
            if i >= j {
                return Err(DatumError::IllegalLinking(e.i, e.j).into());
            }
            lambda.0.insert((i, j), field.parse(&e.value)?);
        }
        let mut mu = Mu::default();
        for e in &self.mu {
            let l = datum
                .roots
                .root_index(&e.root)
                .ok_or_else(|| DatumError::NotARoot(e.root.clone()))?;
            mu.0.insert(l, field.parse(&e.value)?);
        }
        lambda.0.retain(|_, c| !c.is_zero());
        mu.0.retain(|_, c| !c.is_zero());
        validate_lambda(&datum, &lambda)?;
        validate_mu(&datum, &mu)?;
        Ok(Triple { datum, lambda, mu })
    }

    /// Writes a triple in invariant-factor coordinates.
    pub fn from_triple(t: &Triple) -> TripleFile {
        let d = &t.datum;
        let to_i = |v: &[u64]| v.iter().map(|&x| x as i64).collect::<Vec<i64>>();
        TripleFile {
            group: d.group.to_string(),
            g: d.g.iter().map(|x| to_i(&x.0)).collect(),
            chi: d.chi.iter().map(|x| to_i(&x.0)).collect(),
            cartan: d.cartan.clone(),
            zeta_order: Some(d.modulus()),
            lambda: t
                .lambda
                .0
                .iter()
                .map(|(&(i, j), c)| LambdaEntry {
                    i: i + 1,
                    j: j + 1,
                    value: c.to_string(),
                })
                .collect(),
            mu: t
                .mu
                .0
                .iter()
                .map(|(&l, c)| MuEntry {
                    root: d.roots.roots[l].clone(),
                    value: c.to_string(),
                })
                .collect(),
        }
    }
}

pub fn parse_triple(json: &str) -> Result<Triple, IoError> {
    let f: TripleFile = serde_json::from_str(json)?;
    f.to_triple()
}

pub fn load_triple(path: &str) -> Result<Triple, IoError> {
    let s = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_string(),
        source,
    })?;
    parse_triple(&s)
}

pub fn triple_to_json(t: &Triple) -> String {
    serde_json::to_string_pretty(&TripleFile::from_triple(t)).expect("plain data serializes")
}

/// Scalars keyed by a display label, for tables in command output.
pub fn scalar_table<K: std::fmt::Debug>(m: &BTreeMap<K, crate::scalars::CycScalar>) -> BTreeMap<String, String> {
    m.iter().map(|(k, v)| (format!("{:?}", k), v.to_string())).collect()
}
