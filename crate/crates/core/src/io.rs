//! Kernel JSON import/export and the CSV grid format.
//!
//! Schema: `{"order": N, "mode": "exact"|"float", "label"?: "...",
//! "diagonal": [...]}` or the same with `"matrix": [[...]]`. Exact
//! scalars travel as `"p/q"` strings, floats as JSON numbers. Schema
//! violations name the offending path.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::kernels::{BivariateKernel, DiagonalKernel};
use crate::scalar::{Mode, Scalar};
use crate::series::CoeffSeq;

/// A kernel read from or written to the JSON interchange format.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelInput {
    Diagonal(DiagonalKernel),
    Bivariate(BivariateKernel),
}

impl KernelInput {
    pub fn mode(&self) -> Mode {
        match self {
            KernelInput::Diagonal(k) => k.mode(),
            KernelInput::Bivariate(k) => k.mode(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            KernelInput::Diagonal(k) => k.order(),
            KernelInput::Bivariate(k) => k.order(),
        }
    }
}

fn scalar_to_value(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(_) => Value::String(s.to_string()),
        Scalar::Float(x) => json!(x),
    }
}

fn value_to_scalar(v: &Value, mode: Mode, path: &str) -> Result<Scalar> {
    match (mode, v) {
        (Mode::Exact, Value::String(s)) => {
            let parsed: Scalar = s.parse()?;
            match parsed {
                Scalar::Exact(_) => Ok(parsed),
                Scalar::Float(_) => Err(Error::KernelSchema(format!(
                    "{path}: exact mode requires \"p/q\" strings, got a float literal"
                ))),
            }
        }
        (Mode::Exact, Value::Number(n)) if n.is_i64() => {
            Ok(Scalar::from_int(n.as_i64().expect("checked i64")))
        }
        (Mode::Float, Value::Number(n)) => n
            .as_f64()
            .map(Scalar::Float)
            .ok_or_else(|| Error::KernelSchema(format!("{path}: not a finite number"))),
        _ => Err(Error::KernelSchema(format!(
            "{path}: expected a {mode}-mode scalar, got {v}"
        ))),
    }
}

/// Serializes a kernel to the interchange schema.
pub fn kernel_to_json(kernel: &KernelInput) -> Value {
    let mut obj = Map::new();
    obj.insert("order".into(), json!(kernel.order()));
    obj.insert("mode".into(), json!(kernel.mode().to_string()));
    match kernel {
        KernelInput::Diagonal(k) => {
            obj.insert("label".into(), json!(k.label()));
            let diag: Vec<Value> =
                (0..=k.order()).map(|n| scalar_to_value(&k.coeffs().get(n))).collect();
            obj.insert("diagonal".into(), Value::Array(diag));
        }
        KernelInput::Bivariate(k) => {
            let rows: Vec<Value> = (0..=k.order())
                .map(|m| {
                    Value::Array(
                        (0..=k.order()).map(|n| scalar_to_value(&k.get(m, n))).collect(),
                    )
                })
                .collect();
            obj.insert("matrix".into(), Value::Array(rows));
        }
    }
    Value::Object(obj)
}

/// Parses a kernel from the interchange schema.
pub fn kernel_from_json(text: &str) -> Result<KernelInput> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::KernelSchema(format!("invalid JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::KernelSchema("top level: expected an object".into()))?;

    let mode = match obj.get("mode").and_then(Value::as_str) {
        Some("exact") => Mode::Exact,
        Some("float") => Mode::Float,
        Some(other) => {
            return Err(Error::KernelSchema(format!(
                "mode: expected \"exact\" or \"float\", got {other:?}"
            )))
        }
        None => return Err(Error::KernelSchema("mode: missing".into())),
    };
    let order = obj
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::KernelSchema("order: missing or not a non-negative integer".into()))?
        as usize;

    match (obj.get("diagonal"), obj.get("matrix")) {
        (Some(diag), None) => {
            let arr = diag
                .as_array()
                .ok_or_else(|| Error::KernelSchema("diagonal: expected an array".into()))?;
            if arr.len() != order + 1 {
                return Err(Error::KernelSchema(format!(
                    "diagonal: expected {} entries for order {order}, got {}",
                    order + 1,
                    arr.len()
                )));
            }
            let mut scalars = Vec::with_capacity(arr.len());
            for (n, item) in arr.iter().enumerate() {
                scalars.push(value_to_scalar(item, mode, &format!("diagonal[{n}]"))?);
            }
            let label = obj
                .get("label")
                .and_then(Value::as_str)
                .unwrap_or("imported")
                .to_string();
            let coeffs = CoeffSeq::from_scalars(scalars)?;
            Ok(KernelInput::Diagonal(DiagonalKernel::new(coeffs, label)?))
        }
        (None, Some(mat)) => {
            let rows = mat
                .as_array()
                .ok_or_else(|| Error::KernelSchema("matrix: expected an array of rows".into()))?;
            if rows.len() != order + 1 {
                return Err(Error::KernelSchema(format!(
                    "matrix: expected {} rows for order {order}, got {}",
                    order + 1,
                    rows.len()
                )));
            }
            match mode {
                Mode::Exact => {
                    let mut out = Vec::with_capacity(rows.len());
                    for (m, row) in rows.iter().enumerate() {
                        let row = row.as_array().ok_or_else(|| {
                            Error::KernelSchema(format!("matrix[{m}]: expected an array"))
                        })?;
                        let mut r = Vec::with_capacity(row.len());
                        for (n, item) in row.iter().enumerate() {
                            match value_to_scalar(item, mode, &format!("matrix[{m}][{n}]"))? {
                                Scalar::Exact(q) => r.push(q),
                                Scalar::Float(_) => unreachable!("mode checked"),
                            }
                        }
                        out.push(r);
                    }
                    Ok(KernelInput::Bivariate(BivariateKernel::from_rationals(out)?))
                }
                Mode::Float => {
                    let mut out = Vec::with_capacity(rows.len());
                    for (m, row) in rows.iter().enumerate() {
                        let row = row.as_array().ok_or_else(|| {
                            Error::KernelSchema(format!("matrix[{m}]: expected an array"))
                        })?;
                        let mut r = Vec::with_capacity(row.len());
                        for (n, item) in row.iter().enumerate() {
                            match value_to_scalar(item, mode, &format!("matrix[{m}][{n}]"))? {
                                Scalar::Float(x) => r.push(x),
                                Scalar::Exact(_) => unreachable!("mode checked"),
                            }
                        }
                        out.push(r);
                    }
                    Ok(KernelInput::Bivariate(BivariateKernel::from_floats(out)?))
                }
            }
        }
        (Some(_), Some(_)) => Err(Error::KernelSchema(
            "exactly one of \"diagonal\" or \"matrix\" must be present, got both".into(),
        )),
        (None, None) => Err(Error::KernelSchema(
            "exactly one of \"diagonal\" or \"matrix\" must be present, got neither".into(),
        )),
    }
}

/// CSV grid rows `(r, theta, value)` under a one-line header.
pub fn grid_csv(rows: impl IntoIterator<Item = (f64, f64, f64)>) -> String {
    let mut out = String::from("r,theta,value\n");
    for (r, theta, value) in rows {
        out.push_str(&format!("{r},{theta},{value}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases;

    #[test]
    fn diagonal_kernel_round_trips_exact() {
        let k = cases::quintic_product(8, Mode::Exact).unwrap();
        let text = kernel_to_json(&KernelInput::Diagonal(k.clone())).to_string();
        assert!(text.contains("\"129/256\""));
        let back = kernel_from_json(&text).unwrap();
        match back {
            KernelInput::Diagonal(b) => assert_eq!(b.coeffs(), k.coeffs()),
            _ => panic!("expected diagonal kernel"),
        }
    }

    #[test]
    fn bivariate_kernel_round_trips_float() {
        let k = cases::unit_quadratic_gram(Mode::Float);
        let text = kernel_to_json(&KernelInput::Bivariate(k.clone())).to_string();
        let back = kernel_from_json(&text).unwrap();
        assert_eq!(back, KernelInput::Bivariate(k));
    }

    #[test]
    fn schema_violations_name_the_offending_path() {
        let bad = r#"{"order": 1, "mode": "exact", "diagonal": ["1", 0.5]}"#;
        let err = kernel_from_json(bad).unwrap_err().to_string();
        assert!(err.contains("diagonal[1]"), "{err}");

        let bad = r#"{"order": 2, "mode": "float", "diagonal": [1.0, 2.0]}"#;
        let err = kernel_from_json(bad).unwrap_err().to_string();
        assert!(err.contains("expected 3 entries"), "{err}");

        let bad = r#"{"order": 0, "mode": "float"}"#;
        assert!(kernel_from_json(bad).is_err());
    }

    #[test]
    fn integer_literals_are_accepted_in_exact_mode() {
        let text = r#"{"order": 1, "mode": "exact", "diagonal": [1, "1/2"]}"#;
        let k = kernel_from_json(text).unwrap();
        match k {
            KernelInput::Diagonal(d) => {
                assert_eq!(d.coeffs().get(0), Scalar::from_int(1));
                assert_eq!(d.coeffs().get(1), Scalar::ratio(1, 2));
            }
            _ => panic!("expected diagonal"),
        }
    }

    #[test]
    fn csv_grid_format() {
        let out = grid_csv(vec![(0.5, 0.0, 1.25)]);
        assert_eq!(out, "r,theta,value\n0.5,0,1.25\n");
    }
}
