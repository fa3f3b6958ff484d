//! CSV serialization of sweep tables.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::SweepRow;

/// Column order of the emitted CSV.
pub const COLUMNS: [&str; 17] = [
    "p_in", "eps1", "eps2", "zeta1", "zeta2", "s_x1", "s_y1", "s_x2", "s_y2", "c_x", "c_y",
    "var_sum", "var_diff", "g_opt", "v_epr", "v_dgcz", "status",
];

/// 12 significant digits.
fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

impl SweepRow {
    fn values(&self) -> [f64; 16] {
        [
            self.p_in,
            self.eps1,
            self.eps2,
            self.zeta1,
            self.zeta2,
            self.s_x1,
            self.s_y1,
            self.s_x2,
            self.s_y2,
            self.c_x,
            self.c_y,
            self.var_sum,
            self.var_diff,
            self.g_opt,
            self.v_epr,
            self.v_dgcz,
        ]
    }

    fn from_values(v: [f64; 16], status: String) -> Self {
        let [p_in, eps1, eps2, zeta1, zeta2, s_x1, s_y1, s_x2, s_y2, c_x, c_y, var_sum, var_diff, g_opt, v_epr, v_dgcz] =
            v;
        Self {
            p_in,
            eps1,
            eps2,
            zeta1,
            zeta2,
            s_x1,
            s_y1,
            s_x2,
            s_y2,
            c_x,
            c_y,
            var_sum,
            var_diff,
            g_opt,
            v_epr,
            v_dgcz,
            status,
        }
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(COLUMNS)?;
    for row in rows {
        let mut record: Vec<String> = row.values().iter().map(|&v| format_value(v)).collect();
        record.push(row.status.clone());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> csv::Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(csv::Error::from(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("unexpected header: {header:?}"),
        )));
    }
    r.records()
        .map(|record| {
            let record = record?;
            let mut values = [0.0; 16];
            for (i, slot) in values.iter_mut().enumerate() {
                *slot = record[i].parse().map_err(|e| {
                    csv::Error::from(std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("column {}: {e}", COLUMNS[i]),
                    ))
                })?;
            }
            Ok(SweepRow::from_values(values, record[16].to_owned()))
        })
        .collect()
}

/// Writes `rows` to `path`.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    write_csv(rows, std::io::BufWriter::new(file)).map_err(|source| Error::Csv {
        path: path.to_owned(),
        source,
    })
}

pub fn load_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    read_csv(file).map_err(|source| Error::Csv {
        path: path.to_owned(),
        source,
    })
}
