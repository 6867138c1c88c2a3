use serde::Serialize;

use crate::doc::{MiuraDocument, RegularityDoc, SolutionDoc, SolutionsDocument, VerifyDocument};
use crate::run::{CliError, CliResult};

pub fn to_json<T: Serialize>(doc: &T) -> CliResult<String> {
    serde_json::to_string_pretty(doc)
        .map_err(|e| CliError::Numeric(format!("serialization failed: {e}")))
}

fn finish(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Numeric(format!("csv flush failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Numeric(e.to_string()))
}

fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Numeric(format!("csv write failed: {e}"))
}

const TAIL_HEADER: [&str; 7] = [
    "solution", "point_re", "point_im", "function", "order", "coeff_re", "coeff_im",
];

fn tail_rows(
    w: &mut csv::Writer<Vec<u8>>,
    index: usize,
    regularity: &[RegularityDoc],
) -> CliResult<()> {
    for r in regularity {
        for (k, tail) in r.tails.iter().enumerate() {
            for t in tail {
                w.write_record([
                    index.to_string(),
                    num(r.point[0]),
                    num(r.point[1]),
                    format!("v{}", k + 1),
                    t.order.to_string(),
                    num(t.coeff[0]),
                    num(t.coeff[1]),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    Ok(())
}

fn solutions_csv<'a>(sols: impl IntoIterator<Item = &'a SolutionDoc>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TAIL_HEADER).map_err(csv_err)?;
    for (i, s) in sols.into_iter().enumerate() {
        if let Some(reg) = &s.regularity {
            tail_rows(&mut w, i, reg)?;
        }
    }
    finish(w)
}

/// Laurent tails at the Bethe roots, one row per coefficient.
pub fn solutions_to_csv(doc: &SolutionsDocument) -> CliResult<String> {
    solutions_csv(&doc.solutions)
}

pub fn verify_to_csv(doc: &VerifyDocument) -> CliResult<String> {
    solutions_csv([&doc.solution])
}

/// Pole parts of every `v_k`, one row per coefficient.
pub fn miura_to_csv(doc: &MiuraDocument) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "function", "pole_re", "pole_im", "order", "coeff_re", "coeff_im",
    ])
    .map_err(csv_err)?;
    for (k, v) in doc.v.iter().enumerate() {
        for p in &v.poles {
            for (j, c) in p.coeffs.iter().enumerate() {
                w.write_record([
                    format!("v{}", k + 1),
                    num(p.at[0]),
                    num(p.at[1]),
                    format!("-{}", j + 1),
                    num(c[0]),
                    num(c[1]),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    finish(w)
}
