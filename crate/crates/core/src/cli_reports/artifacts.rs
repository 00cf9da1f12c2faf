//! On-disk forms: `curve.json`, `amplitude.json` and `moments.csv`.
//! Every exact number is written as a string.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde_json::{json, Value};

use crate::amplitudes::{CalibrationRecord, MomentTable, Pipeline};
use crate::exact_algebra::{parse_rat, render_rat, Coeff, CouplingPoly, PLaurent, TruncSeries};
use crate::spectral_curve::CurveData;

use super::ReportError;

pub const CURVE_FORMAT: &str = "chain-disks/curve/1";
pub const TABLE_FORMAT: &str = "chain-disks/moments/1";

fn bad(what: &str) -> ReportError {
    ReportError::Format(what.to_string())
}

fn series_json<C: Coeff>(s: &TruncSeries<C>) -> Value {
    let terms: Vec<Value> = s.terms().map(|(e, c)| json!([e, c.render()])).collect();
    json!({ "prec": s.prec(), "terms": terms })
}

fn series_from<C: Coeff>(v: &Value) -> Result<TruncSeries<C>, ReportError> {
    let prec = v["prec"]
        .as_i64()
        .ok_or_else(|| bad("series without prec"))? as i32;
    let mut terms = Vec::new();
    for t in v["terms"]
        .as_array()
        .ok_or_else(|| bad("series without terms"))?
    {
        let e = t[0].as_i64().ok_or_else(|| bad("term exponent"))? as i32;
        let c = t[1].as_str().ok_or_else(|| bad("term coefficient"))?;
        let p = CouplingPoly::parse(c).map_err(|e| ReportError::Format(e.to_string()))?;
        terms.push((
            e,
            C::from_poly(&p).map_err(|e| ReportError::Format(e.to_string()))?,
        ));
    }
    Ok(TruncSeries::from_terms(&terms, prec))
}

fn laurent_json<C: Coeff>(z: &PLaurent<C>) -> Value {
    let terms: Vec<Value> = z
        .terms()
        .iter()
        .map(|(k, s)| json!({ "p": k, "h": series_json(s) }))
        .collect();
    json!(terms)
}

fn laurent_from<C: Coeff>(v: &Value) -> Result<PLaurent<C>, ReportError> {
    let mut map = BTreeMap::new();
    for t in v.as_array().ok_or_else(|| bad("z must be a list"))? {
        let k = t["p"].as_i64().ok_or_else(|| bad("p exponent"))? as i32;
        map.insert(k, series_from(&t["h"])?);
    }
    Ok(PLaurent::from_map(map))
}

/// `curve.json` body: the functions `z_i(p)` with h-series coefficients.
pub fn curve_to_json<C: Coeff>(curve: &CurveData<C>, meta: Value) -> Value {
    json!({
        "format": CURVE_FORMAT,
        "domain": C::domain().tag(),
        "h_order": curve.h_order,
        "s": curve.s,
        "r": curve.r,
        "gamma1": render_rat(&curve.gamma1),
        "gamma": series_json(&curve.gamma),
        "z": curve.z.iter().map(laurent_json).collect::<Vec<_>>(),
        "meta": meta,
    })
}

pub fn curve_from_json<C: Coeff>(v: &Value) -> Result<CurveData<C>, ReportError> {
    if v["format"] != CURVE_FORMAT {
        return Err(bad("not a curve file"));
    }
    if v["domain"] != C::domain().tag() {
        return Err(ReportError::Format(format!(
            "curve file holds {} coefficients",
            v["domain"]
        )));
    }
    let usizes = |key: &str| -> Result<Vec<usize>, ReportError> {
        v[key]
            .as_array()
            .ok_or_else(|| bad(key))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad(key)))
            .collect()
    };
    Ok(CurveData {
        z: v["z"]
            .as_array()
            .ok_or_else(|| bad("z"))?
            .iter()
            .map(laurent_from)
            .collect::<Result<Vec<_>, _>>()?,
        gamma: series_from(&v["gamma"])?,
        h_order: v["h_order"].as_u64().ok_or_else(|| bad("h_order"))? as usize,
        s: usizes("s")?,
        r: usizes("r")?,
        gamma1: parse_rat(v["gamma1"].as_str().ok_or_else(|| bad("gamma1"))?)
            .map_err(|e| ReportError::Format(e.to_string()))?,
    })
}

fn calibration_json(c: &CalibrationRecord) -> Value {
    json!({
        "coupling_sign": c.coupling_sign,
        "t_offset": c.t_offset,
        "local_degree": c.local_degree,
        "matched_cells": c.matched_cells,
        "hash": c.hash(),
    })
}

fn calibration_from(v: &Value) -> Result<Option<CalibrationRecord>, ReportError> {
    if v.is_null() {
        return Ok(None);
    }
    let int = |k: &str| v[k].as_i64().ok_or_else(|| bad(k));
    Ok(Some(CalibrationRecord {
        coupling_sign: int("coupling_sign")? as i32,
        t_offset: int("t_offset")? as i32,
        local_degree: v["local_degree"]
            .as_array()
            .ok_or_else(|| bad("local_degree"))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|x| x as u32)
                    .ok_or_else(|| bad("local_degree"))
            })
            .collect::<Result<_, _>>()?,
        matched_cells: int("matched_cells")? as usize,
    }))
}

/// Calibration column of the CSV; tables that need none carry `none`.
pub fn calibration_tag(t: &MomentTable) -> String {
    t.calibration
        .as_ref()
        .map(|c| c.hash())
        .unwrap_or_else(|| "none".into())
}

/// `amplitude.json`: the table with its provenance.
pub fn table_to_json(t: &MomentTable, meta: Value) -> Value {
    let cells: Vec<Value> = t
        .cells
        .iter()
        .map(|((n, v), c)| json!({ "n": n, "v": v, "coefficient": c.render() }))
        .collect();
    json!({
        "format": TABLE_FORMAT,
        "n_chain": t.n_chain,
        "pipeline": t.pipeline.tag(),
        "nmax": t.nmax,
        "vmax": t.vmax,
        "h_order": t.h_order,
        "calibration": t.calibration.as_ref().map(calibration_json),
        "cells": cells,
        "meta": meta,
    })
}

pub fn table_from_json(v: &Value) -> Result<MomentTable, ReportError> {
    if v["format"] != TABLE_FORMAT {
        return Err(bad("not a moments file"));
    }
    let u = |k: &str| v[k].as_u64().map(|x| x as usize).ok_or_else(|| bad(k));
    let pipeline =
        Pipeline::parse(v["pipeline"].as_str().unwrap_or("")).ok_or_else(|| bad("pipeline"))?;
    let mut t = MomentTable::new(u("n_chain")?, pipeline, u("nmax")?, u("vmax")?);
    t.h_order = v["h_order"].as_u64().map(|x| x as usize);
    t.calibration = calibration_from(&v["calibration"])?;
    for c in v["cells"].as_array().ok_or_else(|| bad("cells"))? {
        let n: Vec<usize> = c["n"]
            .as_array()
            .ok_or_else(|| bad("n"))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad("n")))
            .collect::<Result<_, _>>()?;
        let vv = c["v"].as_u64().ok_or_else(|| bad("v"))? as usize;
        let p = CouplingPoly::parse(
            c["coefficient"]
                .as_str()
                .ok_or_else(|| bad("coefficient"))?,
        )
        .map_err(|e| ReportError::Format(e.to_string()))?;
        t.insert(n, vv, p);
    }
    Ok(t)
}

/// `moments.csv`: `n1..nN, v, coefficient, pipeline, calibration`.
pub fn write_csv<W: Write>(t: &MomentTable, w: W) -> Result<(), ReportError> {
    let mut wr = csv::Writer::from_writer(w);
    let mut header: Vec<String> = (1..=t.n_chain).map(|i| format!("n{i}")).collect();
    header.extend(["v", "coefficient", "pipeline", "calibration"].map(String::from));
    wr.write_record(&header)?;
    let cal = calibration_tag(t);
    for ((n, v), c) in &t.cells {
        let mut row: Vec<String> = n.iter().map(|x| x.to_string()).collect();
        row.push(v.to_string());
        row.push(c.render());
        row.push(t.pipeline.tag().into());
        row.push(cal.clone());
        wr.write_record(&row)?;
    }
    wr.flush()?;
    Ok(())
}

/// A table read back from CSV, with the calibration hash it carried.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub table: MomentTable,
    pub calibration: String,
}

pub fn read_csv<R: Read>(r: R) -> Result<CsvTable, ReportError> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers()?.clone();
    let n_chain = header
        .iter()
        .take_while(|h| h.starts_with('n') && h[1..].parse::<usize>().is_ok())
        .count();
    let want: Vec<String> = (1..=n_chain)
        .map(|i| format!("n{i}"))
        .chain(["v", "coefficient", "pipeline", "calibration"].map(String::from))
        .collect();
    if n_chain < 2
        || header.iter().collect::<Vec<_>>() != want.iter().map(String::as_str).collect::<Vec<_>>()
    {
        return Err(ReportError::Format(format!(
            "unexpected CSV header {:?}",
            header
        )));
    }
    let mut cells = Vec::new();
    let mut pipeline = None;
    let mut calibration = None;
    for rec in rd.records() {
        let rec = rec?;
        let num = |i: usize| {
            rec[i]
                .parse::<usize>()
                .map_err(|_| ReportError::Format(format!("bad integer {:?}", &rec[i])))
        };
        let n = (0..n_chain).map(num).collect::<Result<Vec<_>, _>>()?;
        let v = num(n_chain)?;
        let c = CouplingPoly::parse(&rec[n_chain + 1])
            .map_err(|e| ReportError::Format(e.to_string()))?;
        let p = Pipeline::parse(&rec[n_chain + 2]).ok_or_else(|| bad("pipeline tag"))?;
        if *pipeline.get_or_insert(p) != p {
            return Err(bad("mixed pipeline tags"));
        }
        let cal = rec[n_chain + 3].to_string();
        if *calibration.get_or_insert_with(|| cal.clone()) != cal {
            return Err(bad("mixed calibration hashes"));
        }
        cells.push((n, v, c));
    }
    let nmax = cells
        .iter()
        .map(|(n, _, _)| n.iter().sum::<usize>())
        .max()
        .unwrap_or(0);
    let vmax = cells.iter().map(|(_, v, _)| *v).max().unwrap_or(0);
    let mut t = MomentTable::new(n_chain, pipeline.unwrap_or(Pipeline::Recursion), nmax, vmax);
    for (n, v, c) in cells {
        t.insert(n, v, c);
    }
    Ok(CsvTable {
        table: t,
        calibration: calibration.unwrap_or_else(|| "none".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{rat, Rat};
    use crate::spectral_curve::{solve_curve, ChainModel};

    #[test]
    fn symbolic_curve_round_trips() {
        let c: CurveData<CouplingPoly> = solve_curve(&ChainModel::cubic_chain(), 4).unwrap();
        let v = curve_to_json(&c, Value::Null);
        let text = serde_json::to_string(&v).unwrap();
        let back: CurveData<CouplingPoly> =
            curve_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn numeric_curve_round_trips() {
        let m = ChainModel::cubic_chain().instantiate(&[rat(1, 3), rat(1, 5), rat(1, 7)]);
        let c: CurveData<Rat> = solve_curve(&m, 5).unwrap();
        let back: CurveData<Rat> = curve_from_json(&curve_to_json(&c, Value::Null)).unwrap();
        assert_eq!(back, c);
        assert!(curve_from_json::<CouplingPoly>(&curve_to_json(&c, Value::Null)).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut t = MomentTable::new(3, Pipeline::Oracle, 1, 2);
        t.insert(vec![0, 0, 0], 1, CouplingPoly::one());
        t.insert(
            vec![1, 0, 0],
            2,
            CouplingPoly::parse("-4*g1 - g2 - 2*g3").unwrap(),
        );
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n1,n2,n3,v,coefficient,pipeline,calibration\n"));
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(back.table.cells, t.cells);
        assert_eq!(back.calibration, "none");
        assert_eq!(table_from_json(&table_to_json(&t, Value::Null)).unwrap(), t);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::exact_algebra::{rat, Rat};
    use crate::spectral_curve::{solve_curve, ChainModel, CurveData};
    use proptest::prelude::*;
    use serde_json::Value;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]

        #[test]
        fn curve_json_round_trips(a in 1i64..6, b in -4i64..5, c in 1i64..6) {
            let m = ChainModel::cubic_chain().instantiate(&[rat(a, 7), rat(b, 5), rat(c, 9)]);
            let cd: CurveData<Rat> = solve_curve(&m, 5).unwrap();
            let back: CurveData<Rat> = curve_from_json(&curve_to_json(&cd, Value::Null)).unwrap();
            prop_assert_eq!(back, cd);
        }
    }
}
