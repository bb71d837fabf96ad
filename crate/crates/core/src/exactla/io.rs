use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Field, FieldScalar, LinalgError, SparseMatrix};

/// Wire form of a [`SparseMatrix`]. Rational entries travel as strings (`"num/den"` or
/// `"num"`), residues as plain numbers.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixPayload {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    pub entries: Vec<(usize, usize, Value)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_labels: Option<Vec<String>>,
}

impl From<&SparseMatrix> for MatrixPayload {
    fn from(m: &SparseMatrix) -> Self {
        MatrixPayload {
            rows: m.rows(),
            cols: m.cols(),
            field: m.field(),
            entries: m
                .entries()
                .iter()
                .map(|(r, c, v)| {
                    let v = match v {
                        FieldScalar::Rational(_) => Value::String(v.to_string()),
                        FieldScalar::Modular { residue, .. } => Value::from(*residue),
                    };
                    (*r, *c, v)
                })
                .collect(),
            row_labels: m.row_labels().map(<[String]>::to_vec),
            col_labels: m.col_labels().map(<[String]>::to_vec),
        }
    }
}

impl TryFrom<MatrixPayload> for SparseMatrix {
    type Error = LinalgError;

    fn try_from(p: MatrixPayload) -> Result<Self, Self::Error> {
        let entries = p
            .entries
            .iter()
            .map(|(r, c, v)| {
                let text = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    other => return Err(LinalgError::Parse(format!("bad matrix entry {other}"))),
                };
                Ok((*r, *c, p.field.parse_scalar(&text)?))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(l) = &p.row_labels {
            if l.len() != p.rows {
                return Err(LinalgError::Parse("row label count differs from rows".into()));
            }
        }
        if let Some(l) = &p.col_labels {
            if l.len() != p.cols {
                return Err(LinalgError::Parse("column label count differs from cols".into()));
            }
        }
        Ok(SparseMatrix::new(p.field, p.rows, p.cols, entries)?.with_labels(p.row_labels, p.col_labels))
    }
}

impl Serialize for SparseMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixPayload::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = MatrixPayload::deserialize(d)?;
        SparseMatrix::try_from(p).map_err(serde::de::Error::custom)
    }
}

impl SparseMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<SparseMatrix, LinalgError> {
        serde_json::from_str(s).map_err(|e| LinalgError::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_rational() {
        let q = Field::Rational;
        let m = SparseMatrix::from_dense(
            q,
            &[
                vec![q.from_ratio(-3, 4).unwrap(), q.zero()],
                vec![q.zero(), q.from_i64(7)],
            ],
        )
        .with_labels(Some(vec!["a".into(), "b".into()]), None);
        let s = m.to_json();
        assert!(s.contains("\"-3/4\""));
        assert!(s.contains("\"Q\""));
        let back = SparseMatrix::from_json(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn round_trip_modular() {
        let f = Field::Prime(101);
        let m = SparseMatrix::from_i64_rows(f, &[&[1, -1], &[0, 5]]);
        let s = m.to_json();
        assert!(s.contains("\"Fp:101\""));
        assert!(s.contains("[0,1,100]"));
        assert_eq!(SparseMatrix::from_json(&s).unwrap(), m);
    }

    #[test]
    fn malformed_payloads_are_rejected() {
        assert!(SparseMatrix::from_json(r#"{"rows":1,"cols":1,"field":"Fp:4","entries":[]}"#).is_err());
        assert!(SparseMatrix::from_json(r#"{"rows":1,"cols":1,"field":"Q","entries":[[0,0,"0"]]}"#).is_err());
        assert!(SparseMatrix::from_json(r#"{"rows":1,"cols":1,"field":"Q","entries":[[0,0,"1"],[0,0,"2"]]}"#).is_err());
    }
}
