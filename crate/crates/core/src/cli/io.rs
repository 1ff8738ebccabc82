//! JSON file formats shared by the subcommands.

use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::StableGraph;

/// Version stamped into every file the CLI writes.
pub const FILE_SCHEMA: u32 = 1;

/// A single graph, as read by `--graph`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default = "schema_default")]
    pub schema: u32,
    #[serde(flatten)]
    pub graph: StableGraph,
}

/// A list of graphs, as written by `graphs gen`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphListFile {
    pub schema: u32,
    pub g: u32,
    pub n: u32,
    pub count: usize,
    pub graphs: Vec<StableGraph>,
}

fn schema_default() -> u32 {
    FILE_SCHEMA
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn check_schema(found: u32, path: &Path) -> Result<()> {
    if found != FILE_SCHEMA {
        return Err(Error::Parse(format!("{}: unsupported schema {found}", path.display())));
    }
    Ok(())
}

/// One validated graph.
pub fn read_graph(path: &Path) -> Result<StableGraph> {
    let f: GraphFile = read_json(path)?;
    check_schema(f.schema, path)?;
    f.graph.validate()?;
    Ok(f.graph)
}

/// Either a graph list or a single graph.
pub fn read_graphs(path: &Path) -> Result<Vec<StableGraph>> {
    let value: serde_json::Value = read_json(path)?;
    let graphs = if value.get("graphs").is_some() {
        let f: GraphListFile = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        check_schema(f.schema, path)?;
        f.graphs
    } else {
        vec![read_graph(path)?]
    };
    for g in &graphs {
        g.validate()?;
    }
    Ok(graphs)
}

/// Pretty JSON with object keys in sorted order and a trailing newline.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `out` when given, else to `stdout`.
pub fn emit(text: &str, out: Option<&Path>, stdout: &mut (dyn Write + Send)) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_file_round_trip_and_sorted_keys() {
        let g =
            StableGraph::raw(vec![StableGraph::v(1, &[1]), StableGraph::v(1, &[])], vec![StableGraph::e(0, 1)], false);
        let text = to_sorted_json(&GraphFile { schema: FILE_SCHEMA, graph: g.clone() }).unwrap();
        let keys: Vec<usize> = ["\"edges\"", "\"schema\"", "\"semistable\"", "\"vertices\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));

        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.json");
        std::fs::write(&p, &text).unwrap();
        assert_eq!(read_graph(&p).unwrap(), g);
        assert_eq!(read_graphs(&p).unwrap(), vec![g]);
    }

    #[test]
    fn rejects_unstable_and_foreign_schema() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.json");
        std::fs::write(&p, r#"{"vertices":[{"genus":0,"legs":[1]}]}"#).unwrap();
        assert!(read_graph(&p).is_err());
        std::fs::write(&p, r#"{"schema":9,"vertices":[{"genus":1,"legs":[1]}]}"#).unwrap();
        assert!(matches!(read_graph(&p), Err(Error::Parse(_))));
        std::fs::write(&p, "not json").unwrap();
        assert!(matches!(read_graphs(&p), Err(Error::Parse(_))));
    }
}
