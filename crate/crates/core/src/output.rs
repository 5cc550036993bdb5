//! Deterministic JSON and CSV writers.
//!
//! Floats are written in scientific notation with 17 significant digits, so equal
//! inputs give byte-identical output. Non-finite floats become `null` in JSON and
//! `inf`, `-inf`, `nan` in CSV. Keys keep declaration order.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

use crate::classify::SweepRow;
use crate::curves::CurveSample;
use crate::extremal::RadialProfile;

pub const SCHEMA: &str = "attain-kit/1";

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format!("{value:.16e}").as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    schema: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

/// `value` as compact JSON with fixed float formatting.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FixedFloats);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// `{"schema": "attain-kit/1", ...fields of body}`; `body` must serialize as a map.
pub fn document<T: Serialize>(body: &T) -> serde_json::Result<String> {
    to_json(&Document { schema: SCHEMA, body })
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn write_rows<W: Write>(w: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> csv::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(header)?;
    for r in rows {
        out.write_record(&r)?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `t, s, f, g, h_factor, m_factor`.
pub fn write_curve_csv<W: Write>(w: W, samples: &[CurveSample]) -> csv::Result<()> {
    write_rows(
        w,
        &["t", "s", "f", "g", "h_factor", "m_factor"],
        samples.iter().map(|c| [c.t, c.s, c.f, c.g, c.h_factor, c.m_factor].map(fmt_f64).to_vec()),
    )
}

/// Columns `gamma, threshold, D, attained`.
pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> csv::Result<()> {
    write_rows(
        w,
        &["gamma", "threshold", "D", "attained"],
        rows.iter().map(|r| vec![fmt_f64(r.gamma), fmt_f64(r.threshold), fmt_f64(r.d), r.attained.to_string()]),
    )
}

/// Columns `r, u`.
pub fn write_profile_csv<W: Write>(w: W, profile: &RadialProfile) -> csv::Result<()> {
    write_rows(
        w,
        &["r", "u"],
        profile
            .grid
            .iter()
            .zip(profile.values.iter())
            .map(|(&r, &u)| vec![fmt_f64(r), fmt_f64(u)]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Demo {
        b: f64,
        a: u32,
        c: Option<f64>,
        d: f64,
    }

    #[test]
    fn json_is_fixed_and_ordered() {
        let s = document(&Demo {
            b: 0.1,
            a: 3,
            c: None,
            d: f64::INFINITY,
        })
        .unwrap();
        assert_eq!(
            s,
            r#"{"schema":"attain-kit/1","b":1.0000000000000001e-1,"a":3,"c":null,"d":null}"#
        );
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["b"].as_f64(), Some(0.1));
    }

    #[test]
    fn round_trip_is_exact() {
        for x in [1.0 / 3.0, 2f64.sqrt(), 1e-300, 6.02214076e23, -0.0] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn csv_uses_lf() {
        let rows = [SweepRow {
            gamma: 1.0,
            threshold: 0.5,
            d: 1.0,
            attained: false,
        }];
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "gamma,threshold,D,attained\n1.0000000000000000e0,5.0000000000000000e-1,1.0000000000000000e0,false\n"
        );
    }
}
