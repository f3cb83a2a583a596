//! JSON and CSV wire formats.
//!
//! Rationals travel as strings (`"2"`, `"13/2"`), never as floats. Receiver
//! sets are sorted digit strings (`"134"`); sets with receivers above 9 use
//! dot-separated indices (`"2.10.13"`).
//!
//! - network: `{"K": 3, "capacities": {"1": "1", "12": "3/2", ...}}`;
//!   missing links default to capacity zero with a logged warning.
//! - H-representation: `{"variables": [...], "rows": [{"coeffs":
//!   {"R_123": "2"}, "rhs": "13/2"}, ...]}`.
//! - V-representation: a bare array of coordinate arrays, in variable order.
//! - valuation: `{"K": 3, "a1": "4", ..., "b": ["4"], ..., "g": "0"}`.
//! - reports: serialized [`crate::verify::VerificationReport`]; the CSV
//!   summary has columns `instance,check,pass,millis`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{HPolytope, LinearInequality};
use crate::lattice::ReceiverSet;
use crate::network::{CombinationNetwork, InfoValuation};
use crate::rat::{self, Rat};
use crate::verify::VerificationReport;
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct NetworkWire {
    #[serde(rename = "K")]
    k: u8,
    capacities: BTreeMap<String, String>,
}

pub fn network_to_json(net: &CombinationNetwork) -> String {
    let wire = NetworkWire {
        k: net.k(),
        capacities: net
            .capacities()
            .iter()
            .map(|(s, c)| (s.to_string(), rat::format(c)))
            .collect(),
    };
    serde_json::to_string_pretty(&wire).expect("network serializes")
}

pub fn network_from_json(json: &str) -> Result<CombinationNetwork> {
    let wire: NetworkWire =
        serde_json::from_str(json).map_err(|e| Error::Schema(format!("network json: {e}")))?;
    let mut caps = BTreeMap::new();
    for (key, value) in wire.capacities {
        let set: ReceiverSet = key.parse()?;
        if caps.insert(set, rat::parse_nonneg(&value)?).is_some() {
            return Err(Error::Schema(format!("duplicate capacity key {key:?}")));
        }
    }
    let (net, missing) = CombinationNetwork::from_partial(wire.k, caps)?;
    if !missing.is_empty() {
        let names: Vec<String> = missing.iter().map(|s| s.to_string()).collect();
        log::warn!(
            "network is missing {} capacity entries (defaulting to 0): {}",
            names.len(),
            names.join(", ")
        );
    }
    Ok(net)
}

#[derive(Serialize, Deserialize)]
struct RowWire {
    coeffs: BTreeMap<String, String>,
    rhs: String,
}

#[derive(Serialize, Deserialize)]
struct HrepWire {
    variables: Vec<String>,
    rows: Vec<RowWire>,
}

pub fn hrep_to_json(poly: &HPolytope) -> String {
    let wire = HrepWire {
        variables: poly.variables().to_vec(),
        rows: poly
            .rows()
            .iter()
            .map(|row| RowWire {
                coeffs: row
                    .coeffs()
                    .iter()
                    .map(|(n, c)| (n.clone(), rat::format(c)))
                    .collect(),
                rhs: rat::format(row.rhs()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&wire).expect("polytope serializes")
}

pub fn hrep_from_json(json: &str) -> Result<HPolytope> {
    let wire: HrepWire =
        serde_json::from_str(json).map_err(|e| Error::Schema(format!("h-rep json: {e}")))?;
    let mut rows = Vec::with_capacity(wire.rows.len());
    for row in wire.rows {
        let coeffs = row
            .coeffs
            .into_iter()
            .map(|(name, c)| Ok((name, rat::parse(&c)?)))
            .collect::<Result<Vec<(String, Rat)>>>()?;
        rows.push(LinearInequality::new(coeffs, rat::parse(&row.rhs)?));
    }
    HPolytope::new(wire.variables, rows)
}

/// V-representation: bare array of coordinate arrays in variable order.
pub fn vrep_to_json(vertices: &[Vec<Rat>]) -> String {
    let wire: Vec<Vec<String>> = vertices
        .iter()
        .map(|v| v.iter().map(rat::format).collect())
        .collect();
    serde_json::to_string_pretty(&wire).expect("vertices serialize")
}

#[derive(Serialize, Deserialize)]
struct ValuationWire {
    #[serde(rename = "K")]
    k: u8,
    a1: String,
    a2: String,
    a3: String,
    a4: String,
    b: Vec<String>,
    c: Vec<String>,
    d: Vec<String>,
    e: Vec<String>,
    f: Vec<String>,
    #[serde(default)]
    g: Option<String>,
}

pub fn valuation_to_json(v: &InfoValuation) -> String {
    let fmt_vec = |xs: &[Rat]| xs.iter().map(rat::format).collect();
    let wire = ValuationWire {
        k: v.k(),
        a1: rat::format(&v.a1),
        a2: rat::format(&v.a2),
        a3: rat::format(&v.a3),
        a4: rat::format(&v.a4),
        b: fmt_vec(&v.b),
        c: fmt_vec(&v.c),
        d: fmt_vec(&v.d),
        e: fmt_vec(&v.e),
        f: fmt_vec(&v.f),
        g: Some(rat::format(&v.g)),
    };
    serde_json::to_string_pretty(&wire).expect("valuation serializes")
}

pub fn valuation_from_json(json: &str) -> Result<InfoValuation> {
    let wire: ValuationWire =
        serde_json::from_str(json).map_err(|e| Error::Schema(format!("valuation json: {e}")))?;
    let parse_vec = |xs: &[String]| {
        xs.iter()
            .map(|s| rat::parse_nonneg(s))
            .collect::<Result<Vec<Rat>>>()
    };
    InfoValuation::new(
        wire.k,
        rat::parse_nonneg(&wire.a1)?,
        rat::parse_nonneg(&wire.a2)?,
        rat::parse_nonneg(&wire.a3)?,
        rat::parse_nonneg(&wire.a4)?,
        parse_vec(&wire.b)?,
        parse_vec(&wire.c)?,
        parse_vec(&wire.d)?,
        parse_vec(&wire.e)?,
        parse_vec(&wire.f)?,
        wire.g
            .as_deref()
            .map(rat::parse_nonneg)
            .transpose()?
            .unwrap_or_else(rat::zero),
    )
}

#[derive(Serialize, Deserialize)]
struct RegionJobWire {
    kind: String,
    #[serde(default)]
    network: Option<serde_json::Value>,
    #[serde(default)]
    valuation: Option<serde_json::Value>,
}

/// Runs a region job description of the form
/// `{"kind": "capacity", "network": {...}}` or
/// `{"kind": "inner", "valuation": {...}}`, returning the generated system.
pub fn region_from_job_json(json: &str) -> Result<HPolytope> {
    let wire: RegionJobWire =
        serde_json::from_str(json).map_err(|e| Error::Schema(format!("region job json: {e}")))?;
    let kind: crate::regions::RegionKind = wire.kind.parse()?;
    match (wire.network, wire.valuation) {
        (Some(net), None) => {
            let net = network_from_json(&net.to_string())?;
            crate::regions::generate_for_network(kind, &net)
        }
        (None, Some(v)) => {
            let v = valuation_from_json(&v.to_string())?;
            crate::regions::generate_for_valuation(kind, &v)
        }
        (Some(_), Some(_)) => Err(Error::Schema(
            "region job takes either a network or a valuation, not both".into(),
        )),
        (None, None) => Err(Error::Schema(
            "region job needs a network or a valuation".into(),
        )),
    }
}

/// Writes the per-check CSV summary: `instance,check,pass,millis`.
pub fn write_summary_csv<W: Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer
        .write_record(["instance", "check", "pass", "millis"])
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    for report in reports {
        let instance = match report.instance.seed {
            Some(seed) => format!(
                "{}-k{}-seed{}",
                report.instance.label, report.instance.k, seed
            ),
            None => format!("{}-k{}", report.instance.label, report.instance.k),
        };
        for check in &report.checks {
            writer
                .write_record([
                    instance.as_str(),
                    check.name.as_str(),
                    if check.pass { "true" } else { "false" },
                    &check.millis.to_string(),
                ])
                .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        }
    }
    writer.flush()?;
    Ok(())
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))
}

pub fn write_string(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use crate::regions::capacity_region;

    #[test]
    fn network_round_trip() {
        let net = CombinationNetwork::uniform(3, frac(3, 2)).unwrap();
        let json = network_to_json(&net);
        let back = network_from_json(&json).unwrap();
        assert_eq!(net, back);
    }

    #[test]
    fn network_missing_keys_default_zero() {
        let json = r#"{"K": 3, "capacities": {"12": "2", "123": "1/2"}}"#;
        let net = network_from_json(json).unwrap();
        assert_eq!(*net.capacity("12".parse().unwrap()).unwrap(), int(2));
        assert_eq!(*net.capacity("1".parse().unwrap()).unwrap(), int(0));
    }

    #[test]
    fn network_rejects_bad_input() {
        assert!(network_from_json(r#"{"K": 3, "capacities": {"12": "-1"}}"#).is_err());
        assert!(network_from_json(r#"{"K": 3, "capacities": {"14": "1"}}"#).is_err());
        assert!(network_from_json(r#"{"K": 3, "capacities": {"12": "0.5"}}"#).is_err());
        assert!(network_from_json("not json").is_err());
    }

    #[test]
    fn hrep_round_trip() {
        let net = CombinationNetwork::uniform(4, frac(5, 4)).unwrap();
        let poly = capacity_region(&net).unwrap();
        let json = hrep_to_json(&poly);
        let back = hrep_from_json(&json).unwrap();
        assert_eq!(poly, back);
    }

    #[test]
    fn hrep_rejects_undeclared_variable() {
        let json = r#"{"variables": ["x"], "rows": [{"coeffs": {"y": "1"}, "rhs": "0"}]}"#;
        assert!(hrep_from_json(json).is_err());
    }

    #[test]
    fn valuation_round_trip_and_default_binning() {
        let v = CombinationNetwork::uniform(4, int(2))
            .unwrap()
            .optimal_valuation()
            .unwrap();
        let json = valuation_to_json(&v);
        let back = valuation_from_json(&json).unwrap();
        assert_eq!(v, back);

        let no_g = r#"{"K":3,"a1":"1","a2":"1","a3":"1","a4":"1",
                       "b":["1"],"c":["1"],"d":["1"],"e":["1"],"f":["1"]}"#;
        let v = valuation_from_json(no_g).unwrap();
        assert!(!v.has_binning());
    }

    #[test]
    fn region_job_dispatch() {
        let poly = region_from_job_json(
            r#"{"kind": "capacity",
                "network": {"K": 3, "capacities": {"1":"1","2":"1","3":"1",
                             "12":"1","13":"1","23":"1","123":"1"}}}"#,
        )
        .unwrap();
        assert_eq!(poly.dim(), 4);

        let v = CombinationNetwork::uniform(3, int(1))
            .unwrap()
            .optimal_valuation()
            .unwrap();
        let job = format!(
            r#"{{"kind": "inner", "valuation": {}}}"#,
            valuation_to_json(&v)
        );
        let from_job = region_from_job_json(&job).unwrap();
        let direct = crate::regions::inner_bound_region(&v).unwrap();
        assert_eq!(from_job, direct);

        assert!(region_from_job_json(r#"{"kind": "capacity"}"#).is_err());
        assert!(region_from_job_json(r#"{"kind": "nope", "network": {}}"#).is_err());
    }

    #[test]
    fn vrep_format() {
        let verts = vec![vec![int(0), int(0)], vec![frac(1, 2), int(1)]];
        let json = vrep_to_json(&verts);
        let parsed: Vec<Vec<String>> = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, vec![vec!["0", "0"], vec!["1/2", "1"]]);
    }

    #[test]
    fn csv_summary_shape() {
        let net = CombinationNetwork::uniform(3, int(1)).unwrap();
        let report = crate::verify::verify_capacity(&net, Some(9)).unwrap();
        let mut buf = Vec::new();
        write_summary_csv(std::slice::from_ref(&report), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("instance,check,pass,millis"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("capacity-k3-seed9,outer_contains_inner,true,"));
    }
}
