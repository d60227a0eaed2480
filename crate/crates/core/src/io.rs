//! Path CSV, vector-field JSON and signature JSON interchange.

use std::io::{Read, Write};
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::path::{EuclideanPath, TimeGrid};
use crate::tensor::GroupElement;
use crate::vector_field::{FieldSpec, VectorField};

pub const SCHEMA_VERSION: u32 = 1;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Reads a path from CSV with header `t,x1,...,xn`; lines are 1-based.
pub fn read_path_csv(reader: impl Read) -> Result<EuclideanPath> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| parse_err(1, e.to_string()))?,
        None => return Err(parse_err(1, "empty input, expected header t,x1,...,xn")),
    };
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < 2 || cols[0] != "t" {
        return Err(parse_err(1, format!("header must be t,x1,...,xn, got '{}'", cols.join(","))));
    }
    for (i, c) in cols.iter().enumerate().skip(1) {
        if *c != format!("x{i}") {
            return Err(parse_err(1, format!("column {} must be named x{i}, got '{c}'", i + 1)));
        }
    }
    let dim = cols.len() - 1;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != dim + 1 {
            return Err(parse_err(line, format!("expected {} fields, got {}", dim + 1, rec.len())));
        }
        let mut row = Vec::with_capacity(dim + 1);
        for field in rec.iter() {
            let v: f64 = field.parse().map_err(|_| parse_err(line, format!("not a number: '{field}'")))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("non-finite value '{field}'")));
            }
            row.push(v);
        }
        times.push(row[0]);
        values.push(row[1..].to_vec());
    }
    let grid = TimeGrid::new(times)?;
    EuclideanPath::new(grid, values)
}

pub fn read_path_file(path: &Path) -> Result<EuclideanPath> {
    read_path_csv(std::fs::File::open(path)?)
}

/// Writes `t,x1,...,xn` with shortest round-trip float formatting.
pub fn write_path_csv(path: &EuclideanPath, writer: impl Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(writer);
    let io = |e: csv::Error| Error::Io(e.to_string());
    let header: Vec<String> = std::iter::once("t".to_string()).chain((1..=path.dim()).map(|i| format!("x{i}"))).collect();
    w.write_record(&header).map_err(io)?;
    for (t, x) in path.grid().times().iter().zip(path.points()) {
        let row: Vec<String> = std::iter::once(*t).chain(x.iter().copied()).map(|v| v.to_string()).collect();
        w.write_record(&row).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_path_file(path: &EuclideanPath, file: &Path) -> Result<()> {
    write_path_csv(path, std::fs::File::create(file)?)
}

pub fn read_field_json(reader: impl Read) -> Result<VectorField> {
    let spec: FieldSpec = serde_json::from_reader(reader).map_err(|e| parse_err(e.line(), e.to_string()))?;
    VectorField::from_spec(&spec)
}

pub fn read_field_file(path: &Path) -> Result<VectorField> {
    read_field_json(std::fs::File::open(path)?)
}

pub fn field_to_json(field: &VectorField) -> Result<String> {
    serde_json::to_string_pretty(&field.to_spec()).map_err(|e| Error::Io(e.to_string()))
}

/// Level `k` of a tensor as `k`-fold nested arrays of shape `n × … × n`.
fn nest(flat: &[f64], dim: usize, k: usize) -> Value {
    if k == 0 {
        return json!(flat[0]);
    }
    if k == 1 {
        return json!(flat);
    }
    let stride = flat.len() / dim;
    Value::Array((0..dim).map(|i| nest(&flat[i * stride..(i + 1) * stride], dim, k - 1)).collect())
}

fn flatten(v: &Value, out: &mut Vec<f64>) -> Result<()> {
    match v {
        Value::Number(n) => out.push(n.as_f64().ok_or_else(|| parse_err(0, "non-finite number"))?),
        Value::Array(a) => a.iter().try_for_each(|x| flatten(x, out))?,
        _ => return Err(parse_err(0, "signature levels must be numbers or nested arrays")),
    }
    Ok(())
}

/// `{schema_version, dim, depth, levels: [1, [..], [[..]], ...]}`.
pub fn signature_to_json(g: &GroupElement) -> Value {
    let levels: Vec<Value> = (0..=g.depth()).map(|k| nest(g.level(k), g.dim(), k)).collect();
    json!({ "schema_version": SCHEMA_VERSION, "dim": g.dim(), "depth": g.depth(), "levels": levels })
}

/// Inverse of [`signature_to_json`]; validates the group structure.
pub fn signature_from_json(v: &Value) -> Result<GroupElement> {
    let get = |key: &str| v.get(key).and_then(Value::as_u64).ok_or_else(|| parse_err(0, format!("missing '{key}'")));
    let (dim, depth) = (get("dim")? as usize, get("depth")? as usize);
    let levels = v.get("levels").and_then(Value::as_array).ok_or_else(|| parse_err(0, "missing 'levels'"))?;
    let flat = levels
        .iter()
        .map(|l| {
            let mut out = Vec::new();
            flatten(l, &mut out)?;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    GroupElement::new(crate::tensor::TruncatedTensor::from_levels(dim, depth, flat)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::lift;

    #[test]
    fn csv_round_trip_is_lossless() {
        let grid = TimeGrid::new(vec![0.0, 0.1, 0.30000000000000004, 1.0 / 3.0]).unwrap();
        let p = EuclideanPath::new(grid, vec![vec![0.0, 1e-300], vec![-2.5, 1.0 / 7.0], vec![3.0, 6.02e23], vec![0.1, -0.0]])
            .unwrap();
        let mut buf = Vec::new();
        write_path_csv(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,x1,x2\n"));
        assert_eq!(read_path_csv(buf.as_slice()).unwrap(), p);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let err = read_path_csv("t,x1\n0,0\n0.5,abc\n".as_bytes()).unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, msg: "not a number: 'abc'".into() });
        assert!(matches!(read_path_csv("s,x1\n0,0\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_path_csv("t,x1\n0,0\n1,2,3\n".as_bytes()), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(read_path_csv("".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_path_csv("t,x1\n0,0\n0,1\n".as_bytes()), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn signature_json_round_trip() {
        let grid = TimeGrid::uniform(1.0, 2).unwrap();
        let p = EuclideanPath::new(grid, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let g = lift(&p, 3).unwrap().value(2).clone();
        let v = signature_to_json(&g);
        assert_eq!(v["levels"][0], 1.0);
        assert_eq!(v["levels"][2][0][1], 1.0);
        assert_eq!(v["levels"][2][1][0], 0.0);
        assert_eq!(v["levels"][3].as_array().unwrap().len(), 2);
        let back = signature_from_json(&v).unwrap();
        assert!(back.tensor().max_abs_diff(g.tensor()) == 0.0);
    }

    #[test]
    fn field_json_round_trip() {
        let text = r#"{"family":"affine","m":1,"n":1,"coefficients":[[[0.5,2.0]]],"box_radius":3.0,"lip_gamma":2.0}"#;
        let f = read_field_json(text.as_bytes()).unwrap();
        assert_eq!(f.eval(&[1.0]), vec![2.5]);
        let again = read_field_json(field_to_json(&f).unwrap().as_bytes()).unwrap();
        assert_eq!(again.to_spec(), f.to_spec());
        assert!(matches!(read_field_json("{".as_bytes()), Err(Error::Parse { .. })));
    }
}
