//! Text formats: canonical graph JSON, partition JSON, scan CSV, peak lists and
//! the boson-graph state map.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::cubelike::{format_bits, Certification};
use crate::error::{input, Result};
use crate::feder::FederGraph;
use crate::graph::Graph;
use crate::partition::Partition;
use crate::scalar::Real;
use crate::walk::FidelitySeries;

/// Positional decimal with 17 significant digits, e.g. `1.0000000000000000`.
pub fn format_sig17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0000000000000000".into();
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let mut out = String::new();
    if x < 0.0 {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            out.extend(std::iter::repeat_n('0', int_len - digits.len()));
            out.push_str(".0");
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

pub fn graph_to_json<T: Real>(g: &Graph<T>) -> String {
    let mut s = String::from("{\n");
    if let Some(name) = &g.name {
        let _ = writeln!(s, "  \"name\": {},", Value::String(name.clone()));
    }
    let _ = writeln!(s, "  \"n\": {},", g.n());
    let edges = g.edges();
    if edges.is_empty() {
        s.push_str("  \"edges\": []\n");
    } else {
        s.push_str("  \"edges\": [\n");
        for (i, (u, v, w)) in edges.iter().enumerate() {
            let sep = if i + 1 < edges.len() { "," } else { "" };
            let _ = writeln!(s, "    [{u}, {v}, {}]{sep}", format_sig17(w.as_f64()));
        }
        s.push_str("  ]\n");
    }
    s.push_str("}\n");
    s
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).or_else(|e| input(format!("malformed JSON: {e}")))
}

fn object(v: &Value, what: &str) -> Result<Map<String, Value>> {
    match v {
        Value::Object(m) => Ok(m.clone()),
        _ => input(format!("{what} must be a JSON object")),
    }
}

fn reject_unknown(m: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => input(format!("unknown key {k:?}")),
        None => Ok(()),
    }
}

fn index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .map_or_else(|| input(format!("{what} must be a nonnegative integer")), Ok)
}

pub fn graph_from_json<T: Real>(text: &str) -> Result<Graph<T>> {
    let root = object(&parse_value(text)?, "graph")?;
    reject_unknown(&root, &["name", "n", "edges"])?;
    let n = index(root.get("n").unwrap_or(&Value::Null), "\"n\"")?;
    let name = match root.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return input("\"name\" must be a string"),
    };
    let Some(Value::Array(raw)) = root.get("edges") else {
        return input("\"edges\" must be an array");
    };
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(raw.len());
    for e in raw {
        let triple = match e {
            Value::Array(t) if t.len() == 3 => t,
            _ => return input("each edge must be [u, v, w]"),
        };
        let u = index(&triple[0], "edge endpoint")?;
        let v = index(&triple[1], "edge endpoint")?;
        let w = triple[2]
            .as_f64()
            .map_or_else(|| input("edge weight must be a number"), Ok)?;
        if u > v {
            return input(format!("edge [{u}, {v}] must list the smaller endpoint first"));
        }
        if v >= n {
            return input(format!("edge [{u}, {v}] out of range for n = {n}"));
        }
        if !(w.is_finite() && w >= 0.0) {
            return input(format!("edge [{u}, {v}] has invalid weight {w}"));
        }
        if !seen.insert((u, v)) {
            return input(format!("duplicate edge [{u}, {v}]"));
        }
        edges.push((u, v, T::lit(w)));
    }
    let mut g = Graph::from_edges(n, &edges)?;
    g.name = name;
    Ok(g)
}

fn list(items: &[usize]) -> String {
    let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub fn partition_to_json(pi: &Partition) -> String {
    let cells: Vec<String> = pi.cells().iter().map(|c| list(c)).collect();
    format!("{{\n  \"m\": {},\n  \"cells\": [{}]\n}}\n", pi.m(), cells.join(", "))
}

pub fn partition_from_json(text: &str) -> Result<Partition> {
    let root = object(&parse_value(text)?, "partition")?;
    reject_unknown(&root, &["m", "cells"])?;
    let Some(Value::Array(raw)) = root.get("cells") else {
        return input("\"cells\" must be an array");
    };
    let cells = raw
        .iter()
        .map(|c| match c {
            Value::Array(vs) => vs.iter().map(|v| index(v, "cell member")).collect(),
            _ => input("each cell must be an array"),
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let n = cells.iter().map(Vec::len).sum();
    let pi = Partition::from_cells(n, &cells)?;
    if let Some(m) = root.get("m") {
        if index(m, "\"m\"")? != pi.m() {
            return input(format!("\"m\" disagrees with the {} cells given", pi.m()));
        }
    }
    Ok(pi)
}

pub fn scan_csv<T: Real>(series: &FidelitySeries<T>) -> String {
    let mut s = String::from("t,fidelity\n");
    for (t, f) in &series.grid {
        let _ = writeln!(s, "{},{}", format_sig17(t.as_f64()), format_sig17(f.as_f64()));
    }
    s
}

pub fn peaks_json<T: Real>(series: &FidelitySeries<T>) -> String {
    let rows: Vec<String> = series
        .refined_peaks
        .iter()
        .map(|p| {
            format!(
                "  {{\"t\": {}, \"fidelity\": {}}}",
                format_sig17(p.t.as_f64()),
                format_sig17(p.fidelity.as_f64())
            )
        })
        .collect();
    if rows.is_empty() {
        "[]\n".into()
    } else {
        format!("[\n{}\n]\n", rows.join(",\n"))
    }
}

/// Occupation vector of every boson-graph vertex.
pub fn feder_states_json<T>(fed: &FederGraph<T>) -> String {
    let states: Vec<Value> = fed
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| json!({"occupation": s.counts(), "vertex": i}))
        .collect();
    let k = fed.states.first().map_or(0, |s| s.k());
    let mut out = serde_json::to_string_pretty(&json!({"k": k, "states": states}))
        .expect("plain JSON values serialize");
    out.push('\n');
    out
}

pub fn certification_json(cert: &Certification, d: u32) -> String {
    let p = cert.prediction;
    let v = json!({
        "omega": format_bits(cert.omega, d),
        "time": p.map(|p| p.time),
        "target": p.and_then(|p| p.target).map(|t| format_bits(t, d)),
        "certified": cert.certified,
    });
    let mut out = serde_json::to_string_pretty(&v).expect("plain JSON values serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build, GraphFamilySpec as F};

    #[test]
    fn sig17_formatting() {
        assert_eq!(format_sig17(1.0), "1.0000000000000000");
        assert_eq!(format_sig17(0.5), "0.50000000000000000");
        assert_eq!(format_sig17(std::f64::consts::FRAC_PI_2), "1.5707963267948966");
        assert_eq!(format_sig17(2f64.sqrt() * 10.0), "14.142135623730951");
        assert_eq!(format_sig17(1e20), "100000000000000000000.0");
        assert_eq!(format_sig17(-0.03125), "-0.031250000000000000");
        assert_eq!(format_sig17(0.0), "0.0000000000000000");
        for x in [0.1, 1.0 / 3.0, 6.0 / 15f64.sqrt(), 1e-300, 123456.789] {
            assert_eq!(format_sig17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn graph_json_layout_and_round_trip() {
        let g = build::<f64>(&F::WeightedP4 { a: 0.5, b: 2f64.sqrt() }).unwrap().with_name("p4");
        let text = graph_to_json(&g);
        assert!(text.starts_with("{\n  \"name\": \"p4\",\n  \"n\": 4,\n  \"edges\": [\n    [0, 1, 1.0000000000000000],\n    [1, 1, 0.50000000000000000],"));
        let back: Graph<f64> = graph_from_json(&text).unwrap();
        assert_eq!(back.adjacency(), g.adjacency());
        assert_eq!(graph_to_json(&back), text);

        let lone = Graph::<f64>::from_edges(1, &[]).unwrap();
        assert_eq!(graph_to_json(&lone), "{\n  \"n\": 1,\n  \"edges\": []\n}\n");
    }

    #[test]
    fn graph_parser_rejections() {
        let bad = [
            r#"{"n": 2, "edges": [[0, 1, 1.0], [0, 1, 1.0]]}"#,
            r#"{"n": 2, "edges": [[0, 1, -1.0]]}"#,
            r#"{"n": 2, "edges": [[0, 2, 1.0]]}"#,
            r#"{"n": 2, "edges": [[1, 0, 1.0]]}"#,
            r#"{"n": 2, "edges": [[0, 1]]}"#,
            r#"{"n": 2, "edges": [], "extra": 1}"#,
            r#"{"n": -1, "edges": []}"#,
            r#"{"edges": []}"#,
            r#"[1, 2]"#,
            "not json",
        ];
        for text in bad {
            assert!(graph_from_json::<f64>(text).is_err(), "{text}");
        }
    }

    #[test]
    fn partition_json_round_trip() {
        let pi = Partition::from_cells(4, &[vec![3, 0], vec![2, 1]]).unwrap();
        let text = partition_to_json(&pi);
        assert_eq!(text, "{\n  \"m\": 2,\n  \"cells\": [[0, 3], [1, 2]]\n}\n");
        assert_eq!(partition_from_json(&text).unwrap(), pi);
        assert!(partition_from_json(r#"{"m": 3, "cells": [[0, 3], [1, 2]]}"#).is_err());
        assert!(partition_from_json(r#"{"cells": [[0, 1], [1, 2]]}"#).is_err());
    }
}
