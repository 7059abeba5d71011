//! JSON interchange formats for cubic forms.
//!
//! Input is a list of monomials (`exps` per variable, rational `coeff` as a
//! string); the canonical output mirrors it with polarized tensor entries on
//! sorted index triples. Tensor files are also accepted on input, so
//! exported catalog entries round-trip.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::multilinear::{CubicForm, Monomial};
use crate::rat::{format_rat, parse_rat};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialRecord {
    pub exps: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CubicJson {
    pub dim: usize,
    pub monomials: Vec<MonomialRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorEntryJson {
    pub ijk: [usize; 3],
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorJson {
    pub dim: usize,
    pub tensor: Vec<TensorEntryJson>,
}

/// Parses either the monomial format or the canonical tensor format.
pub fn parse_cubic(text: &str) -> Result<CubicForm> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if value.get("monomials").is_some() {
        let parsed: CubicJson =
            serde_json::from_value(value).map_err(|e| Error::Json(e.to_string()))?;
        let mut monomials = Vec::with_capacity(parsed.monomials.len());
        for (index, m) in parsed.monomials.iter().enumerate() {
            let coeff = parse_rat(&m.coeff).map_err(|_| Error::NotHomogeneousCubic {
                index,
                reason: format!("cannot parse coefficient `{}`", m.coeff),
            })?;
            monomials.push(Monomial {
                exps: m.exps.clone(),
                coeff,
            });
        }
        CubicForm::polarize(parsed.dim, &monomials)
    } else if value.get("tensor").is_some() {
        let parsed: TensorJson =
            serde_json::from_value(value).map_err(|e| Error::Json(e.to_string()))?;
        let mut entries = Vec::with_capacity(parsed.tensor.len());
        for (index, t) in parsed.tensor.iter().enumerate() {
            let v = parse_rat(&t.value).map_err(|_| Error::NotHomogeneousCubic {
                index,
                reason: format!("cannot parse tensor value `{}`", t.value),
            })?;
            entries.push((t.ijk, v));
        }
        CubicForm::from_tensor(parsed.dim, entries)
    } else {
        Err(Error::Json(
            "expected a `monomials` or `tensor` field".into(),
        ))
    }
}

/// Canonical tensor serialization: sorted triples, reduced rationals.
pub fn to_tensor_json(f: &CubicForm) -> TensorJson {
    TensorJson {
        dim: f.dim(),
        tensor: f
            .tensor_entries()
            .map(|(ijk, v)| TensorEntryJson {
                ijk: *ijk,
                value: format_rat(v),
            })
            .collect(),
    }
}

pub fn tensor_json_string(f: &CubicForm) -> String {
    serde_json::to_string_pretty(&to_tensor_json(f)).expect("serializable")
}

/// Content hash of the canonical tensor serialization; reports carry it so
/// results are tied to the exact input form.
pub fn content_hash(f: &CubicForm) -> String {
    let mut hasher = Sha256::new();
    hasher.update(tensor_json_string(f).as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    #[test]
    fn parses_monomial_format() {
        let text = r#"{"dim": 3, "monomials": [
            {"exps": [3,0,0], "coeff": "1"},
            {"exps": [1,1,1], "coeff": "-2/3"}
        ]}"#;
        let f = parse_cubic(text).unwrap();
        assert_eq!(f.dim(), 3);
        assert_eq!(f.tensor_value(0, 0, 0), rat(1));
        assert_eq!(f.tensor_value(0, 1, 2), ratio(-1, 9));
    }

    #[test]
    fn diagnostics_name_the_offending_record() {
        let text = r#"{"dim": 2, "monomials": [
            {"exps": [3,0], "coeff": "1"},
            {"exps": [2,0], "coeff": "1"}
        ]}"#;
        let err = parse_cubic(text).unwrap_err();
        assert!(err.to_string().contains("monomial #1"), "{err}");

        let text = r#"{"dim": 2, "monomials": [{"exps": [3,0], "coeff": "x"}]}"#;
        let err = parse_cubic(text).unwrap_err();
        assert!(err.to_string().contains("monomial #0"), "{err}");
    }

    #[test]
    fn tensor_round_trip() {
        let e = crate::catalog::build(crate::catalog::CatalogName::Veronese);
        let text = tensor_json_string(&e.cubic);
        let back = parse_cubic(&text).unwrap();
        assert_eq!(back, e.cubic);
        assert_eq!(content_hash(&back), content_hash(&e.cubic));
    }

    #[test]
    fn malformed_json_is_reported() {
        assert!(matches!(parse_cubic("{oops"), Err(Error::Json(_))));
        assert!(matches!(parse_cubic("{}"), Err(Error::Json(_))));
    }
}
