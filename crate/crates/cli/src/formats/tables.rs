//! Small tabular outputs: alignment dumps, cluster assignments, embeddings.

use phonvar_core::alignment::Alignment;
use phonvar_core::clustering::{ClusterResult, EmbeddingPoint};
use phonvar_core::inventory::{PhonemeInventory, EPSILON_LABEL};

/// One op per line: `expected<TAB>observed<TAB>kind<TAB>cost`.
pub fn write_alignment_dump(alignment: &Alignment, inventory: &PhonemeInventory) -> String {
    let mut out = String::new();
    for op in &alignment.ops {
        let label = |p: Option<_>| p.map_or(EPSILON_LABEL, |p| inventory.label(p));
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            label(op.expected),
            label(op.observed),
            op.kind.as_str(),
            op.cost
        ));
    }
    out
}

/// `speaker_id,cluster`
pub fn write_clusters_csv(result: &ClusterResult) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["speaker_id", "cluster"]).expect("in-memory write");
    for (id, c) in result.speaker_ids.iter().zip(&result.assignments) {
        w.write_record([id.as_str(), &c.to_string()]).expect("in-memory write");
    }
    into_string(w)
}

/// `speaker_id,x,y,kind`
pub fn write_embedding_csv(points: &[EmbeddingPoint]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["speaker_id", "x", "y", "kind"]).expect("in-memory write");
    for p in points {
        w.write_record([p.id.as_str(), &p.x.to_string(), &p.y.to_string(), p.kind.as_str()])
            .expect("in-memory write");
    }
    into_string(w)
}

pub(crate) fn into_string(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}
