//! JSON rendering of library values and plain-text tables for `--pretty`.

use std::collections::BTreeMap;

use quasitoric::{BigInt, BettiTable, CrBettiTable, Finding, LatticeVector, Rational, ValidationReport};
use serde_json::{json, Map, Value};

/// An integer of any size as a JSON number.
pub fn int(i: &BigInt) -> Value {
    serde_json::from_str(&i.to_string()).expect("integer literal is valid JSON")
}

pub fn vector(v: &LatticeVector) -> Value {
    json!([int(&v.x), int(&v.y)])
}

pub fn vectors(vs: &[LatticeVector]) -> Value {
    Value::Array(vs.iter().map(vector).collect())
}

/// Lowest terms `p/q`, or plain `p` for integers.
pub fn rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn betti(table: &BettiTable) -> Value {
    Value::Object(
        table
            .entries
            .iter()
            .map(|(d, n)| (d.to_string(), json!(n)))
            .collect(),
    )
}

pub fn cr_betti(table: &CrBettiTable) -> Value {
    Value::Object(table.entries.iter().map(|(d, n)| (rational(d), json!(n))).collect())
}

pub fn diff(d: &BTreeMap<Rational, i64>) -> Value {
    Value::Object(d.iter().map(|(k, v)| (rational(k), json!(v))).collect())
}

pub fn finding(f: &Finding) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(f.kind()));
    match f {
        Finding::TooFewEdges { count } => obj.insert("count".into(), json!(count)),
        Finding::NotPrimitive { edge } => obj.insert("edge".into(), json!(edge)),
        Finding::DependentAdjacent { vertex } => obj.insert("vertex".into(), json!(vertex)),
    };
    Value::Object(obj)
}

pub fn validation(report: &ValidationReport) -> Value {
    let mut obj = Map::new();
    obj.insert("valid".into(), json!(report.valid));
    obj.insert("positively_omnioriented".into(), json!(report.positively_omnioriented));
    if !report.failures.is_empty() {
        obj.insert("failures".into(), report.failures.iter().map(finding).collect());
    }
    Value::Object(obj)
}

/// Writes an aligned table to standard error.
pub fn table(title: &str, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    eprintln!("{title}");
    eprintln!("{}", line(header.to_vec()));
    eprintln!("{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    for row in rows {
        eprintln!("{}", line(row.iter().map(String::as_str).collect()));
    }
}

pub fn edge_rows(edges: &[LatticeVector]) -> Vec<Vec<String>> {
    edges
        .iter()
        .enumerate()
        .map(|(i, e)| vec![i.to_string(), e.x.to_string(), e.y.to_string()])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_in_lowest_terms() {
        assert_eq!(rational(&Rational::new(8.into(), 6.into())), "4/3");
        assert_eq!(rational(&Rational::new(4.into(), 2.into())), "2");
        assert_eq!(rational(&Rational::new((-1).into(), 3.into())), "-1/3");
    }

    #[test]
    fn big_integers_stay_exact() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(int(&big).to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn validation_omits_empty_failures() {
        let report = ValidationReport {
            valid: true,
            positively_omnioriented: true,
            failures: vec![],
        };
        assert_eq!(validation(&report).to_string(), r#"{"valid":true,"positively_omnioriented":true}"#);
        let report = ValidationReport {
            valid: false,
            positively_omnioriented: false,
            failures: vec![Finding::NotPrimitive { edge: 1 }],
        };
        assert_eq!(
            validation(&report).to_string(),
            r#"{"valid":false,"positively_omnioriented":false,"failures":[{"kind":"NotPrimitive","edge":1}]}"#
        );
    }
}
