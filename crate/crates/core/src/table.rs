//! Fixed-schema CSV rows for measure records, and parsers for the parameter
//! columns and comma-separated number lists.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::linalg::Complex;
use crate::monogamy::MeasureRecord;
use crate::states::{FamilyTag, GhzParams, ParamRecord, WParams};

pub const HEADER: [&str; 24] = [
    "family", "g1", "g2", "g3", "z_re", "z_im", "t", "x", "y", "z", "c12", "c13", "c23", "e12",
    "e13", "e23", "tau", "c3", "e_s", "e_a", "m1", "m2", "verdict1", "verdict2",
];

/// Significant digits of every float cell.
pub const SIG_DIGITS: usize = 12;

/// Slack when re-normalizing W coefficients read back from 12-digit cells.
const W_READ_SLACK: f64 = 1e-9;

/// `printf("%.12g")`: 12 significant digits, trailing zeros dropped,
/// exponent form outside `1e-4 ≤ |x| < 1e12`. Both zeros print as `0`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Cells of one record in [`HEADER`] order; unused parameter cells are empty.
pub fn record_fields(r: &MeasureRecord) -> Vec<String> {
    let f = format_float;
    let mut out = Vec::with_capacity(HEADER.len());
    out.push(r.family.as_str().to_string());
    match &r.params {
        ParamRecord::Ghz(p) => {
            out.extend(p.g.iter().map(|&g| f(g)));
            out.push(f(p.z.re));
            out.push(f(p.z.im));
            out.extend(std::iter::repeat_n(String::new(), 4));
        }
        ParamRecord::W(p) => {
            out.extend(std::iter::repeat_n(String::new(), 5));
            out.extend([p.t, p.x, p.y, p.z].map(f));
        }
    }
    out.extend(
        [
            r.c12, r.c13, r.c23, r.e12, r.e13, r.e23, r.tau, r.c3, r.e_s, r.e_a, r.m1, r.m2,
        ]
        .map(f),
    );
    out.push(r.verdict1.as_str().to_string());
    out.push(r.verdict2.as_str().to_string());
    out
}

/// Writes the header and one row per record, in iteration order.
pub fn write_csv<'a, W: Write>(
    out: W,
    records: impl IntoIterator<Item = &'a MeasureRecord>,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| Error::Parse(format!("CSV write failed: {e}"));
    w.write_record(HEADER).map_err(io)?;
    for r in records {
        w.write_record(record_fields(r)).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Parse(format!("CSV write failed: {e}")))?;
    Ok(())
}

/// CSV text of `records`, header included.
pub fn to_csv_string<'a>(records: impl IntoIterator<Item = &'a MeasureRecord>) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII cells")
}

fn cell_float(fields: &csv::StringRecord, idx: usize) -> Result<f64> {
    let raw = fields.get(idx).unwrap_or("").trim();
    if raw.is_empty() {
        return Err(Error::Parse(format!("column {} is empty", HEADER[idx])));
    }
    let v: f64 = raw
        .parse()
        .map_err(|_| Error::Parse(format!("column {}: '{raw}' is not a number", HEADER[idx])))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!(
            "column {} is not finite",
            HEADER[idx]
        )));
    }
    Ok(v)
}

fn params_from_fields(fields: &csv::StringRecord) -> Result<ParamRecord> {
    if fields.len() != HEADER.len() {
        return Err(Error::Parse(format!(
            "expected {} columns, got {}",
            HEADER.len(),
            fields.len()
        )));
    }
    let family: FamilyTag = fields.get(0).unwrap_or("").trim().parse()?;
    let params = if family.is_w() {
        let [t, x, y, z] = [6, 7, 8, 9].map(|i| cell_float(fields, i));
        let (t, x, y, z) = (t?, x?, y?, z?);
        let sum = t + x + y + z;
        if (sum - 1.0).abs() > W_READ_SLACK {
            return Err(Error::Parse(format!("W coefficients sum to {sum}")));
        }
        ParamRecord::W(WParams::new(t / sum, x / sum, y / sum, z / sum)?)
    } else {
        let g = [
            cell_float(fields, 1)?,
            cell_float(fields, 2)?,
            cell_float(fields, 3)?,
        ];
        let z = Complex::new(cell_float(fields, 4)?, cell_float(fields, 5)?);
        ParamRecord::Ghz(GhzParams::new(g, z)?)
    };
    if params.family() != family {
        return Err(Error::Parse(format!(
            "row tagged {family} but its parameters classify as {}",
            params.family()
        )));
    }
    Ok(params)
}

/// Parameters of every row of a CSV written by [`write_csv`].
pub fn parse_param_csv<R: Read>(input: R) -> Result<Vec<ParamRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = rdr
        .headers()
        .map_err(|e| Error::Parse(format!("CSV header: {e}")))?;
    if header.iter().ne(HEADER) {
        return Err(Error::Parse(
            "header does not match the record schema".into(),
        ));
    }
    rdr.records()
        .map(|row| {
            let row = row.map_err(|e| Error::Parse(format!("CSV row: {e}")))?;
            params_from_fields(&row)
        })
        .collect()
}

/// Parameters of a single data row (no header).
pub fn parse_param_row(line: &str) -> Result<ParamRecord> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(line.as_bytes());
    let mut rows = rdr.records();
    let row = rows
        .next()
        .ok_or_else(|| Error::Parse("empty row".into()))?
        .map_err(|e| Error::Parse(format!("CSV row: {e}")))?;
    if rows.next().is_some() {
        return Err(Error::Parse("more than one row".into()));
    }
    params_from_fields(&row)
}

/// Comma-separated finite floats, e.g. `0.25,0,0`.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|item| {
            let item = item.trim();
            let v: f64 = item
                .parse()
                .map_err(|_| Error::Parse(format!("'{item}' is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse(format!("'{item}' is not finite")))
            }
        })
        .collect()
}

/// Exactly three comma-separated floats.
pub fn parse_g_list(s: &str) -> Result<[f64; 3]> {
    let v = parse_float_list(s)?;
    <[f64; 3]>::try_from(v.as_slice())
        .map_err(|_| Error::Parse(format!("expected three values g1,g2,g3, got {}", v.len())))
}
