//! CSV artifacts: partitions, dendrograms and merge logs.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::dendrogram::{Dendrogram, Merge};
use crate::error::FormatError;
use crate::graph::Graph;
use crate::metrics::{MergeLog, MergeRecord};
use crate::modularity::{Partition, ScaledQ};

pub const PARTITION_COLUMNS: [&str; 2] = ["node_id", "community_id"];
pub const DENDROGRAM_COLUMNS: [&str; 7] = [
    "step",
    "left",
    "right",
    "new",
    "dq_scaled",
    "q_scaled",
    "elapsed_ns",
];
pub const MERGE_LOG_COLUMNS: [&str; 11] = [
    "step",
    "lo",
    "hi",
    "size_lo",
    "size_hi",
    "members_lo",
    "members_hi",
    "ratio",
    "dq_scaled",
    "q_scaled_after",
    "elapsed_ns",
];

// header rows are written explicitly so empty tables still carry them
fn headerless<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out)
}

fn check_headers<R: Read>(
    reader: &mut csv::Reader<R>,
    required: &[&str],
) -> Result<(), FormatError> {
    let headers = reader.headers()?;
    for col in required {
        if !headers.iter().any(|h| h == *col) {
            return Err(FormatError::MissingColumn((*col).to_owned()));
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct PartitionRow {
    node_id: u64,
    community_id: u32,
}

/// `node_id,community_id`, one row per node, node ids in the graph's own
/// numbering.
pub fn write_partition<W: Write>(g: &Graph, p: &Partition, out: W) -> Result<(), FormatError> {
    let mut w = headerless(out);
    w.write_record(PARTITION_COLUMNS)?;
    for v in 0..g.node_count() as u32 {
        w.serialize(PartitionRow {
            node_id: g.original_id(v),
            community_id: p.label(v),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a partition file; labels keep the row order.
pub fn read_partition<R: Read>(input: R) -> Result<Partition, FormatError> {
    let mut r = csv::Reader::from_reader(input);
    check_headers(&mut r, &PARTITION_COLUMNS)?;
    let mut labels = Vec::new();
    for row in r.deserialize::<PartitionRow>() {
        labels.push(row?.community_id);
    }
    Ok(Partition::from_labels(labels))
}

#[derive(Serialize, Deserialize)]
struct DendrogramRow {
    step: u32,
    left: u32,
    right: u32,
    new: u32,
    dq_scaled: i64,
    q_scaled: i64,
    elapsed_ns: u64,
}

/// Writes the merge tree; elapsed times come from the matching merge log.
pub fn write_dendrogram<W: Write>(
    d: &Dendrogram,
    log: &MergeLog,
    out: W,
) -> Result<(), FormatError> {
    let mut w = headerless(out);
    w.write_record(DENDROGRAM_COLUMNS)?;
    for (idx, mg) in d.merges().iter().enumerate() {
        let elapsed_ns = log.records().get(idx).map_or(0, |r| r.elapsed_ns);
        w.serialize(DendrogramRow {
            step: mg.step,
            left: mg.left,
            right: mg.right,
            new: mg.new,
            dq_scaled: mg.dq.0,
            q_scaled: mg.q_after.0,
            elapsed_ns,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a dendrogram over `leaves` singletons. Without a leaf count it is
/// taken from the first merge, whose new id is the leaf count.
pub fn read_dendrogram<R: Read>(
    input: R,
    leaves: Option<usize>,
) -> Result<Dendrogram, FormatError> {
    let mut r = csv::Reader::from_reader(input);
    check_headers(&mut r, &DENDROGRAM_COLUMNS)?;
    let mut merges = Vec::new();
    for row in r.deserialize::<DendrogramRow>() {
        let row = row?;
        merges.push(Merge {
            step: row.step,
            left: row.left,
            right: row.right,
            new: row.new,
            dq: ScaledQ(row.dq_scaled),
            q_after: ScaledQ(row.q_scaled),
        });
    }
    let leaves = leaves
        .or_else(|| merges.first().map(|m| (m.new + 1 - m.step) as usize))
        .unwrap_or(0);
    Dendrogram::from_merges(leaves, merges).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn write_merge_log<W: Write>(log: &MergeLog, out: W) -> Result<(), FormatError> {
    let mut w = headerless(out);
    w.write_record(MERGE_LOG_COLUMNS)?;
    for r in log.records() {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_merge_log<R: Read>(input: R) -> Result<MergeLog, FormatError> {
    let mut r = csv::Reader::from_reader(input);
    check_headers(&mut r, &MERGE_LOG_COLUMNS)?;
    let records = r
        .deserialize::<MergeRecord>()
        .collect::<Result<Vec<_>, _>>()?;
    for (idx, rec) in records.iter().enumerate() {
        if rec.step as usize != idx + 1 {
            return Err(FormatError::Invalid(format!(
                "merge log steps must run 1, 2, ...; row {} has step {}",
                idx + 1,
                rec.step
            )));
        }
    }
    Ok(MergeLog::new(records))
}
