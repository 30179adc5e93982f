//! Table serialization. Floats are written in shortest round-trip
//! scientific notation so identical tables give identical bytes.

use std::io::Write;

use serde::Serialize;

use crate::config::Format;
use crate::sweep::Table;

#[derive(Serialize)]
struct JsonTable<'a> {
    columns: &'a [String],
    rows: &'a [Vec<f64>],
}

pub fn write_csv<W: Write>(table: &Table, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(&table.columns)?;
    for row in &table.rows {
        out.write_record(row.iter().map(|v| format!("{v:e}")))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(table: &Table, mut w: W) -> std::io::Result<()> {
    let doc = JsonTable {
        columns: &table.columns,
        rows: &table.rows,
    };
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)
}

pub fn write<W: Write>(table: &Table, format: Format, w: W) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(table, w).map_err(std::io::Error::other),
        Format::Json => write_json(table, w),
    }
}
