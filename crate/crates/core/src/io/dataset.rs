//! Network files, subject manifests and node metadata.
//!
//! Networks come either as a dense `V × V` CSV of 0/1 cells or as an edge
//! list whose first line is `V=<nodes>` followed by one 1-based `v,u` pair per
//! line. Rows and columns in error messages are 1-based, like the files.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use crate::error::{Error, Result};
use crate::network::{
    Adjacency, EdgeIndexMap, Group, Hemisphere, NetworkObservation, NodeInfo, NodeMetadata,
};

fn reader(text: &str, headers: bool) -> csv::Reader<&[u8]> {
    ReaderBuilder::new()
        .has_headers(headers)
        .comment(Some(b'#'))
        .trim(Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes())
}

fn line_of(record: &StringRecord) -> usize {
    record.position().map_or(0, |p| p.line() as usize)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::parse(line, e.to_string())
}

fn records(text: &str, headers: bool) -> Result<Vec<StringRecord>> {
    reader(text, headers)
        .records()
        .map(|r| r.map_err(csv_error))
        .collect()
}

/// A dense adjacency CSV. Every cell must be 0 or 1 and the matrix must be
/// symmetric off the diagonal; the diagonal itself is ignored.
pub fn parse_adjacency_csv(text: &str) -> Result<Vec<u8>> {
    let rows = records(text, false)?;
    let nodes = rows.len();
    if nodes < 2 {
        return Err(Error::TooFewNodes(nodes));
    }
    let mut adjacency = Adjacency::zeros(nodes);
    for (r, record) in rows.iter().enumerate() {
        let line = line_of(record);
        if record.len() != nodes {
            return Err(Error::parse(
                line,
                format!("row {} has {} columns, expected {nodes}", r + 1, record.len()),
            ));
        }
        for (c, cell) in record.iter().enumerate() {
            let value = match cell {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(Error::parse(
                        line,
                        format!("non-binary value {other:?} at row {}, column {}", r + 1, c + 1),
                    ))
                }
            };
            adjacency.set(r, c, value);
        }
    }
    for (r, row) in rows.iter().enumerate() {
        for c in 0..r {
            if adjacency.get(r, c) != adjacency.get(c, r) {
                return Err(Error::parse(
                    line_of(row),
                    format!(
                        "asymmetric matrix: row {}, column {} differs from row {}, column {}",
                        r + 1,
                        c + 1,
                        c + 1,
                        r + 1
                    ),
                ));
            }
        }
    }
    crate::network::vectorize(&adjacency)
}

fn parse_node_count(field: &str, line: usize) -> Result<usize> {
    let (key, value) = field
        .split_once('=')
        .ok_or_else(|| Error::parse(line, "edge list must start with a V=<nodes> line"))?;
    if !key.trim().eq_ignore_ascii_case("v") {
        return Err(Error::parse(line, "edge list must start with a V=<nodes> line"));
    }
    value
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid node count {:?}", value.trim())))
}

fn parse_node(field: &str, nodes: usize, line: usize) -> Result<usize> {
    let node: usize = field
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid node {field:?}")))?;
    if node == 0 || node > nodes {
        return Err(Error::parse(
            line,
            format!("node {node} outside 1..={nodes}"),
        ));
    }
    Ok(node - 1)
}

/// Largest node count an edge-list header may declare.
pub const MAX_EDGE_LIST_NODES: usize = 4096;

/// An edge list: `V=<nodes>`, then `v,u` pairs of 1-based nodes in either
/// order. Self-loops are ignored and repeated pairs are idempotent.
pub fn parse_edge_list(text: &str) -> Result<Vec<u8>> {
    let rows = records(text, false)?;
    let (first, rest) = rows
        .split_first()
        .ok_or_else(|| Error::parse(1, "empty edge list"))?;
    if first.len() != 1 {
        return Err(Error::parse(
            line_of(first),
            "edge list must start with a V=<nodes> line",
        ));
    }
    let nodes = parse_node_count(&first[0], line_of(first))?;
    if nodes > MAX_EDGE_LIST_NODES {
        return Err(Error::parse(
            line_of(first),
            format!("node count {nodes} exceeds the supported {MAX_EDGE_LIST_NODES}"),
        ));
    }
    let map = EdgeIndexMap::new(nodes)?;
    let mut edges = vec![0u8; map.edges()];
    for record in rest {
        let line = line_of(record);
        if record.len() != 2 {
            return Err(Error::parse(line, "expected a v,u pair"));
        }
        let a = parse_node(&record[0], nodes, line)?;
        let b = parse_node(&record[1], nodes, line)?;
        if a != b {
            edges[map.edge_index(a.max(b), a.min(b))?] = 1;
        }
    }
    Ok(edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkFormat {
    AdjacencyCsv,
    EdgeList,
}

/// Edge lists are recognized by their `V=` header line.
pub fn sniff_format(text: &str) -> NetworkFormat {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) => match l.strip_prefix(['v', 'V']) {
            Some(rest) if rest.trim_start().starts_with('=') => NetworkFormat::EdgeList,
            _ => NetworkFormat::AdjacencyCsv,
        },
        None => NetworkFormat::AdjacencyCsv,
    }
}

/// Parses either network format into an edge vector.
pub fn parse_network(text: &str) -> Result<Vec<u8>> {
    match sniff_format(text) {
        NetworkFormat::AdjacencyCsv => parse_adjacency_csv(text),
        NetworkFormat::EdgeList => parse_edge_list(text),
    }
}

pub fn write_adjacency_csv(edges: &[u8], map: &EdgeIndexMap) -> Result<String> {
    let adjacency = crate::network::matricize(edges, map)?;
    let mut out = String::new();
    for r in 0..map.nodes() {
        let row: Vec<&str> = (0..map.nodes())
            .map(|c| if adjacency.get(r, c) == 1 { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_edge_list(edges: &[u8], map: &EdgeIndexMap) -> Result<String> {
    if edges.len() != map.edges() {
        return Err(Error::DimensionMismatch {
            what: "edge vector",
            expected: map.edges(),
            found: edges.len(),
        });
    }
    let mut out = format!("V={}\n", map.nodes());
    for ((v, u), &a) in map.pairs().zip(edges) {
        if a == 1 {
            out.push_str(&format!("{},{}\n", v + 1, u + 1));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub subject_id: String,
    pub label: Group,
    /// As written; relative paths resolve against the manifest's directory.
    pub path: PathBuf,
}

/// Subject list: a `subject_id,label,path` CSV, optionally preceded by a
/// `#node_metadata=<path>` directive.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
    pub node_metadata: Option<PathBuf>,
}

const MANIFEST_HEADER: [&str; 3] = ["subject_id", "label", "path"];
const METADATA_DIRECTIVE: &str = "node_metadata";

fn parse_label(field: &str, line: usize) -> Result<Group> {
    match field {
        "0" => Ok(Group::Control),
        "1" => Ok(Group::Case),
        other => Err(Error::parse(
            line,
            Error::InvalidLabel(other.to_string()).to_string(),
        )),
    }
}

fn check_header(record: &StringRecord, expected: &[&str], what: &str) -> Result<()> {
    let matches = record.len() == expected.len()
        && record
            .iter()
            .zip(expected)
            .all(|(a, b)| a.eq_ignore_ascii_case(b));
    if matches {
        Ok(())
    } else {
        Err(Error::parse(
            line_of(record),
            format!("{what} header must be {}", expected.join(",")),
        ))
    }
}

pub fn parse_manifest(text: &str) -> Result<Manifest> {
    let mut node_metadata = None;
    for (i, line) in text.lines().enumerate() {
        let Some(comment) = line.trim().strip_prefix('#') else {
            continue;
        };
        if let Some((key, value)) = comment.split_once('=') {
            if key.trim() == METADATA_DIRECTIVE {
                if node_metadata.is_some() {
                    return Err(Error::parse(i + 1, "repeated node_metadata directive"));
                }
                let value = value.trim();
                if value.is_empty() {
                    return Err(Error::parse(i + 1, "empty node_metadata path"));
                }
                node_metadata = Some(PathBuf::from(value));
            }
        }
    }

    let rows = records(text, false)?;
    let (header, rest) = rows
        .split_first()
        .ok_or_else(|| Error::parse(1, "manifest has no header"))?;
    check_header(header, &MANIFEST_HEADER, "manifest")?;
    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(rest.len());
    for record in rest {
        let line = line_of(record);
        if record.len() != 3 {
            return Err(Error::parse(line, "expected subject_id,label,path"));
        }
        let subject_id = record[0].to_string();
        if subject_id.is_empty() {
            return Err(Error::parse(line, "empty subject id"));
        }
        if !seen.insert(subject_id.clone()) {
            return Err(Error::DuplicateSubject(subject_id));
        }
        if record[2].is_empty() {
            return Err(Error::parse(line, "empty path"));
        }
        entries.push(ManifestEntry {
            subject_id,
            label: parse_label(&record[1], line)?,
            path: PathBuf::from(&record[2]),
        });
    }
    Ok(Manifest {
        entries,
        node_metadata,
    })
}

pub(crate) fn write_csv(rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut writer = WriterBuilder::new().from_writer(Vec::new());
    for row in rows {
        writer
            .write_record(&row)
            .map_err(|e| Error::parse(0, e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::parse(0, e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::parse(0, e.to_string()))
}

/// Subject ids starting with `#` or with surrounding whitespace are rejected,
/// since they would not read back unchanged.
pub fn write_manifest(manifest: &Manifest) -> Result<String> {
    for e in &manifest.entries {
        let id = &e.subject_id;
        if id.is_empty() || id.starts_with('#') || id.trim() != id {
            return Err(Error::parse(0, format!("subject id {id:?} cannot be written")));
        }
    }
    let mut out = String::new();
    if let Some(path) = &manifest.node_metadata {
        out.push_str(&format!("#{METADATA_DIRECTIVE}={}\n", path.display()));
    }
    let header = MANIFEST_HEADER.iter().map(|s| s.to_string()).collect();
    let rows = manifest.entries.iter().map(|e| {
        vec![
            e.subject_id.clone(),
            e.label.index().to_string(),
            e.path.display().to_string(),
        ]
    });
    out.push_str(&write_csv(std::iter::once(header).chain(rows))?);
    Ok(out)
}

const METADATA_HEADER: [&str; 3] = ["name", "hemisphere", "lobe"];

fn parse_hemisphere(field: &str, line: usize) -> Result<Hemisphere> {
    match field.to_ascii_lowercase().as_str() {
        "l" | "left" => Ok(Hemisphere::Left),
        "r" | "right" => Ok(Hemisphere::Right),
        "other" => Ok(Hemisphere::Other),
        _ => Err(Error::parse(
            line,
            format!("hemisphere must be L, R or other, got {field:?}"),
        )),
    }
}

/// `name,hemisphere,lobe` rows, one per node in node order.
pub fn parse_node_metadata(text: &str) -> Result<NodeMetadata> {
    let rows = records(text, false)?;
    let (header, rest) = rows
        .split_first()
        .ok_or_else(|| Error::parse(1, "node metadata has no header"))?;
    check_header(header, &METADATA_HEADER, "node metadata")?;
    let nodes = rest
        .iter()
        .map(|record| {
            let line = line_of(record);
            if record.len() != 3 {
                return Err(Error::parse(line, "expected name,hemisphere,lobe"));
            }
            if record[0].is_empty() {
                return Err(Error::parse(line, "empty node name"));
            }
            Ok(NodeInfo {
                name: record[0].to_string(),
                hemisphere: parse_hemisphere(&record[1], line)?,
                lobe: record[2].to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    NodeMetadata::new(nodes)
}

pub fn write_node_metadata(metadata: &NodeMetadata) -> Result<String> {
    let header = METADATA_HEADER.iter().map(|s| s.to_string()).collect();
    let rows = metadata.nodes().iter().map(|n| {
        vec![
            n.name.clone(),
            n.hemisphere.code().to_string(),
            n.lobe.clone(),
        ]
    });
    write_csv(std::iter::once(header).chain(rows))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn in_file<T>(path: &Path, result: Result<T>) -> Result<T> {
    result.map_err(|e| match e {
        e @ Error::Io { .. } => e,
        e => Error::InFile {
            path: path.display().to_string(),
            source: Box::new(e),
        },
    })
}

/// A loaded cohort.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub map: EdgeIndexMap,
    pub observations: Vec<NetworkObservation>,
    pub metadata: Option<NodeMetadata>,
}

/// Reads a manifest and every file it references.
pub fn load_dataset(manifest_path: &Path) -> Result<Dataset> {
    let manifest = in_file(manifest_path, parse_manifest(&read_text(manifest_path)?))?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    if manifest.entries.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut observations = Vec::with_capacity(manifest.entries.len());
    let mut map: Option<EdgeIndexMap> = None;
    for entry in &manifest.entries {
        let path = base.join(&entry.path);
        let edges = in_file(&path, parse_network(&read_text(&path)?))?;
        match &map {
            None => map = Some(EdgeIndexMap::from_edge_count(edges.len())?),
            Some(m) if m.edges() != edges.len() => {
                let found = EdgeIndexMap::from_edge_count(edges.len())?.nodes();
                return Err(Error::InFile {
                    path: path.display().to_string(),
                    source: Box::new(Error::DimensionMismatch {
                        what: "node count across subjects",
                        expected: m.nodes(),
                        found,
                    }),
                });
            }
            Some(_) => {}
        }
        observations.push(NetworkObservation::new(
            entry.subject_id.clone(),
            entry.label,
            edges,
        )?);
    }
    let map = map.expect("at least one subject");
    let metadata = match &manifest.node_metadata {
        Some(rel) => {
            let path = base.join(rel);
            let meta = in_file(&path, parse_node_metadata(&read_text(&path)?))?;
            in_file(&path, meta.check_nodes(&map))?;
            Some(meta)
        }
        None => None,
    };
    Ok(Dataset {
        map,
        observations,
        metadata,
    })
}

/// Writes one network file per subject under `dir/networks`, the node
/// metadata (when given) and `dir/manifest.csv`. Returns the manifest path.
pub fn write_dataset(
    dir: &Path,
    observations: &[NetworkObservation],
    format: NetworkFormat,
    metadata: Option<&NodeMetadata>,
) -> Result<PathBuf> {
    let map = crate::network::common_edge_map(observations)?;
    if let Some(m) = metadata {
        m.check_nodes(&map)?;
    }
    let net_dir = dir.join("networks");
    std::fs::create_dir_all(&net_dir).map_err(|e| Error::io(&net_dir, e))?;
    let mut manifest = Manifest::default();
    for (i, obs) in observations.iter().enumerate() {
        let (name, text) = match format {
            NetworkFormat::AdjacencyCsv => (
                format!("{:04}.csv", i + 1),
                write_adjacency_csv(&obs.edges, &map)?,
            ),
            NetworkFormat::EdgeList => (
                format!("{:04}.txt", i + 1),
                write_edge_list(&obs.edges, &map)?,
            ),
        };
        crate::io::write_atomic(&net_dir.join(&name), text.as_bytes())?;
        manifest.entries.push(ManifestEntry {
            subject_id: obs.subject_id.clone(),
            label: obs.label,
            path: PathBuf::from("networks").join(name),
        });
    }
    if let Some(m) = metadata {
        crate::io::write_atomic(&dir.join("nodes.csv"), write_node_metadata(m)?.as_bytes())?;
        manifest.node_metadata = Some(PathBuf::from("nodes.csv"));
    }
    let path = dir.join("manifest.csv");
    crate::io::write_atomic(&path, write_manifest(&manifest)?.as_bytes())?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn written_dataset_loads_back() {
        let dir = tempfile::tempdir().unwrap();
        let data: Vec<NetworkObservation> = (0..4)
            .map(|i| {
                let label = if i % 2 == 0 { Group::Control } else { Group::Case };
                let edges = (0..6).map(|l| ((i + l) % 3 == 0) as u8).collect();
                NetworkObservation::new(format!("s {i}"), label, edges).unwrap()
            })
            .collect();
        let meta = NodeMetadata::new(
            (0..4)
                .map(|i| NodeInfo {
                    name: format!("n{i}"),
                    hemisphere: Hemisphere::Left,
                    lobe: "x".into(),
                })
                .collect(),
        )
        .unwrap();
        for format in [NetworkFormat::AdjacencyCsv, NetworkFormat::EdgeList] {
            let path = write_dataset(dir.path(), &data, format, Some(&meta)).unwrap();
            let loaded = load_dataset(&path).unwrap();
            assert_eq!(loaded.observations, data);
            assert_eq!(loaded.metadata.as_ref(), Some(&meta));
        }
    }

    #[test]
    fn diagonal_is_ignored() {
        let text = "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n";
        assert_eq!(parse_adjacency_csv(text).unwrap(), vec![0; 6]);
    }

    #[test]
    fn non_binary_cell_names_position() {
        let text = "0,1,0\n1,0,2\n0,2,0\n";
        let err = parse_adjacency_csv(text).unwrap_err().to_string();
        assert!(err.contains("row 2, column 3"), "{err}");
        assert!(parse_adjacency_csv("0,1\n1,x\n").is_err());
    }

    #[test]
    fn asymmetry_and_shape_errors() {
        let err = parse_adjacency_csv("0,1,0\n0,0,0\n0,0,0\n").unwrap_err().to_string();
        assert!(err.contains("asymmetric"), "{err}");
        assert!(parse_adjacency_csv("0,1\n1,0,0\n").is_err());
        assert!(parse_adjacency_csv("0\n").is_err());
        assert!(parse_adjacency_csv("").is_err());
    }

    #[test]
    fn edge_list_example() {
        let edges = parse_edge_list("V=4\n2,1\n4,3\n").unwrap();
        // 1-based pairs (2,1) and (4,3) sit at 0-based positions 0 and 5.
        assert_eq!(edges, vec![1, 0, 0, 0, 0, 1]);
        assert_eq!(parse_network("# comment\nV = 4\n1,2\n3,4\n").unwrap(), edges);
    }

    #[test]
    fn edge_list_errors() {
        assert!(parse_edge_list("2,1\n").is_err());
        assert!(parse_edge_list("V=4\n5,1\n").is_err());
        assert!(parse_edge_list("V=4\n0,1\n").is_err());
        assert!(parse_edge_list("V=4\n1\n").is_err());
        assert!(parse_edge_list("V=x\n").is_err());
        assert!(parse_edge_list("V=1\n").is_err());
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("V=99999999999\n").is_err());
        assert_eq!(sniff_format("é,1\n"), NetworkFormat::AdjacencyCsv);
        // Self-loops are dropped.
        assert_eq!(parse_edge_list("V=3\n2,2\n").unwrap(), vec![0; 3]);
    }

    #[test]
    fn manifest_parsing() {
        let text = "#node_metadata=nodes.csv\nsubject_id,label,path\na,0,a.csv\n# note\nb,1,\"dir, with comma/b.csv\"\n";
        let m = parse_manifest(text).unwrap();
        assert_eq!(m.node_metadata, Some(PathBuf::from("nodes.csv")));
        assert_eq!(m.entries.len(), 2);
        assert_eq!(m.entries[1].label, Group::Case);
        assert_eq!(m.entries[1].path, PathBuf::from("dir, with comma/b.csv"));
        assert_eq!(parse_manifest(&write_manifest(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn manifest_errors() {
        assert!(matches!(
            parse_manifest("subject_id,label,path\na,0,x\na,1,y\n"),
            Err(Error::DuplicateSubject(_))
        ));
        let err = parse_manifest("subject_id,label,path\na,2,x\n").unwrap_err().to_string();
        assert!(err.contains("label"), "{err}");
        assert!(parse_manifest("id,label,path\na,0,x\n").is_err());
        assert!(parse_manifest("subject_id,label,path\na,0\n").is_err());
        assert!(parse_manifest("").is_err());
    }

    #[test]
    fn metadata_parsing() {
        let text = "name,hemisphere,lobe\nlh-a,L,frontal\nrh-a,right,frontal\nstem,other,none\n";
        let meta = parse_node_metadata(text).unwrap();
        assert_eq!(meta.nodes()[1].hemisphere, Hemisphere::Right);
        assert_eq!(parse_node_metadata(&write_node_metadata(&meta).unwrap()).unwrap(), meta);
        assert!(parse_node_metadata("name,hemisphere,lobe\na,up,x\n").is_err());
        assert!(parse_node_metadata("name,hemisphere,lobe\na,L,x\na,R,x\n").is_err());
    }

    #[test]
    fn load_dataset_resolves_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir(dir.path().join("nets")).unwrap();
        std::fs::write(dir.path().join("nets/a.csv"), "0,1,0\n1,0,0\n0,0,0\n").unwrap();
        std::fs::write(dir.path().join("nets/b.txt"), "V=3\n3,2\n").unwrap();
        std::fs::write(
            dir.path().join("nodes.csv"),
            "name,hemisphere,lobe\nx,L,f\ny,R,f\nz,L,o\n",
        )
        .unwrap();
        std::fs::write(
            dir.path().join("manifest.csv"),
            "#node_metadata=nodes.csv\nsubject_id,label,path\na,0,nets/a.csv\nb,1,nets/b.txt\n",
        )
        .unwrap();
        let data = load_dataset(&dir.path().join("manifest.csv")).unwrap();
        assert_eq!(data.map.nodes(), 3);
        assert_eq!(data.observations[0].edges, vec![1, 0, 0]);
        assert_eq!(data.observations[1].edges, vec![0, 0, 1]);
        assert_eq!(data.metadata.unwrap().len(), 3);

        std::fs::write(dir.path().join("nets/b.txt"), "V=4\n3,2\n").unwrap();
        let err = load_dataset(&dir.path().join("manifest.csv")).unwrap_err();
        assert!(err.to_string().contains("b.txt"), "{err}");
        std::fs::remove_file(dir.path().join("nets/b.txt")).unwrap();
        assert!(matches!(
            load_dataset(&dir.path().join("manifest.csv")),
            Err(Error::Io { .. })
        ));
    }

    proptest! {
        #[test]
        fn both_formats_round_trip(nodes in 2usize..12, bits in proptest::collection::vec(any::<bool>(), 66)) {
            let map = EdgeIndexMap::new(nodes).unwrap();
            let edges: Vec<u8> = bits[..map.edges()].iter().map(|&b| u8::from(b)).collect();
            let csv = write_adjacency_csv(&edges, &map).unwrap();
            prop_assert_eq!(sniff_format(&csv), NetworkFormat::AdjacencyCsv);
            prop_assert_eq!(parse_network(&csv).unwrap(), edges.clone());
            let list = write_edge_list(&edges, &map).unwrap();
            prop_assert_eq!(sniff_format(&list), NetworkFormat::EdgeList);
            prop_assert_eq!(parse_network(&list).unwrap(), edges);
        }

        #[test]
        fn parsers_never_panic(text in "\\PC{0,200}") {
            let _ = parse_network(&text);
            let _ = parse_manifest(&text);
            let _ = parse_node_metadata(&text);
        }
    }
}
