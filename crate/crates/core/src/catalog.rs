//! Catalog tables of bundle records in JSON, CSV and Markdown.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::epsilon::{BundleRecord, Epsilon, ResolutionDescriptor};
use crate::error::{Error, Result};
use crate::helix::Foundation;
use crate::index::ThreeAdicRational;
use crate::reference::{audit_index, name_or_ch, reference_row, Discrepancy, PrintedRow};
use crate::rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Json,
    Csv,
    Md,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(TableFormat::Json),
            "csv" => Ok(TableFormat::Csv),
            "md" | "markdown" => Ok(TableFormat::Md),
            _ => Err(Error::Parse(format!("unknown table format {s:?} (json, csv, md)"))),
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableFormat::Json => "json",
            TableFormat::Csv => "csv",
            TableFormat::Md => "md",
        })
    }
}

/// A bundle record with the printed table entry, when there is one, and the
/// fields on which it disagrees with the computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRow {
    #[serde(flatten)]
    pub record: BundleRecord,
    pub printed: Option<PrintedRow>,
    pub discrepancies: Vec<Discrepancy>,
}

pub fn catalog_row(t: ThreeAdicRational, eps: &Epsilon) -> Result<CatalogRow> {
    let record = eps.record(t)?;
    let discrepancies = match audit_index(t, eps) {
        Some(audit) => audit?.discrepancies,
        None => Vec::new(),
    };
    Ok(CatalogRow { record, printed: reference_row(t).cloned(), discrepancies })
}

/// One row per index in `(0, 1)` of order at most `max_order`, by index.
pub fn catalog(max_order: u32, eps: &Epsilon) -> Result<Vec<CatalogRow>> {
    ThreeAdicRational::up_to_order(max_order).into_par_iter().map(|t| catalog_row(t, eps)).collect()
}

pub fn generate_table(max_order: u32, format: TableFormat, eps: &Epsilon) -> Result<String> {
    let rows = catalog(max_order, eps)?;
    match format {
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("catalog rows serialize");
            s.push('\n');
            Ok(s)
        }
        TableFormat::Csv => to_csv(&rows),
        TableFormat::Md => Ok(to_markdown(&rows, eps)),
    }
}

const CSV_HEADER: [&str; 20] = [
    "index",
    "order",
    "slope",
    "rank",
    "ch0",
    "ch1",
    "ch2",
    "ch3",
    "c1",
    "c2",
    "c3",
    "chi",
    "wbn_i",
    "wbn_h",
    "gg",
    "foundation",
    "mark",
    "resolution1",
    "resolution2",
    "discrepancies",
];

fn resolution_text(r: &ResolutionDescriptor, name: impl Fn(&crate::kgroup::ChernCharacter) -> String) -> String {
    format!("{} -> {}^{} -> {}", name(&r.sub), name(&r.middle), r.multiplicity, name(&r.quotient))
}

fn foundation_text(f: &Foundation, name: impl Fn(&crate::kgroup::ChernCharacter) -> String, sep: &str) -> String {
    f.bundles().iter().map(name).collect::<Vec<_>>().join(sep)
}

fn discrepancy_text(ds: &[Discrepancy]) -> String {
    ds.iter().map(|d| format!("{}: {} -> {}", d.field, d.printed, d.computed)).collect::<Vec<_>>().join("; ")
}

fn to_csv(rows: &[CatalogRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    let plain = |v: &crate::kgroup::ChernCharacter| v.to_string();
    for row in rows {
        let r = &row.record;
        let [ch0, ch1, ch2, ch3] = r.ch.to_strings();
        let resolution = |i: usize| r.resolutions.get(i).map(|x| resolution_text(x, plain)).unwrap_or_default();
        w.write_record([
            r.index.to_string(),
            r.order.to_string(),
            rational::format(&r.slope),
            r.rank.to_string(),
            ch0,
            ch1,
            ch2,
            ch3,
            r.c.c1.to_string(),
            r.c.c2.to_string(),
            r.c.c3.to_string(),
            r.chi.to_string(),
            r.wbn.i.to_string(),
            r.wbn.h.to_string(),
            r.gg.to_string(),
            foundation_text(&r.foundation, plain, ";"),
            r.mark.to_string(),
            resolution(0),
            resolution(1),
            discrepancy_text(&row.discrepancies),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn to_markdown(rows: &[CatalogRow], eps: &Epsilon) -> String {
    let name = |v: &crate::kgroup::ChernCharacter| name_or_ch(v, eps);
    let mut out = String::from(
        "| index | order | slope | rank | ch | c | χ | cohomology (conjectural) | gg | foundation | resolutions | printed-table diffs |\n\
         |---|---|---|---|---|---|---|---|---|---|---|---|\n",
    );
    for row in rows {
        let r = &row.record;
        let foundation = r
            .foundation
            .bundles()
            .iter()
            .enumerate()
            .map(|(i, b)| if i == r.mark { format!("**{}**", name(b)) } else { name(b) })
            .collect::<Vec<_>>()
            .join(", ");
        let resolutions = r.resolutions.iter().map(|x| resolution_text(x, name)).collect::<Vec<_>>().join("<br>");
        out.push_str(&format!(
            "| {} | {} | {} (≈{:.4}) | {} | {} | ({}, {}, {}) | {} | h{} = {} | {} | {} | {} | {} |\n",
            r.index,
            r.order,
            rational::format(&r.slope),
            rational::approx(&r.slope),
            r.rank,
            r.ch,
            r.c.c1,
            r.c.c2,
            r.c.c3,
            r.chi,
            r.wbn.i,
            r.wbn.h,
            if r.gg { "yes" } else { "no" },
            foundation,
            resolutions,
            if row.printed.is_none() { "not printed".to_string() } else { discrepancy_text(&row.discrepancies) },
        ));
    }
    out.push_str("\nDecimals marked ≈ are rounded; every other entry is exact.\n");
    out
}
