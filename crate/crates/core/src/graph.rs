//! Dense undirected graphs with bit-matrix adjacency, Cayley graph
//! construction, and lossless serialization (JSON and graph6).

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, ConnectionSet};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Hard cap on the order of a dense graph.
pub const MAX_VERTICES: usize = 50_000;

/// Construction provenance carried by built graphs and embedded in the
/// JSON format.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<u64>,
    pub construction: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q2: Option<u64>,
}

/// Simple undirected graph on vertices 0..n with a symmetric bit matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    meta: Option<GraphMeta>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        assert!(n <= MAX_VERTICES, "graph order {n} exceeds the dense cap");
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            bits: vec![0; words * n],
            meta: None,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
        let mut g = Graph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn meta(&self) -> Option<&GraphMeta> {
        self.meta.as_ref()
    }

    pub fn set_meta(&mut self, meta: GraphMeta) {
        self.meta = Some(meta);
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n && a != b, "bad edge ({a},{b})");
        self.bits[a * self.words + b / 64] |= 1 << (b % 64);
        self.bits[b * self.words + a / 64] |= 1 << (a % 64);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && (self.bits[a * self.words + b / 64] >> (b % 64)) & 1 == 1
    }

    /// The adjacency row of `v` as a word slice.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = (0..self.n).map(|v| self.degree(v)).sum();
        total / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(v);
        (0..self.n).filter(move |&u| (row[u / 64] >> (u % 64)) & 1 == 1)
    }

    /// Number of common neighbors of two vertices, by word-wise AND.
    pub fn common_neighbors(&self, a: usize, b: usize) -> usize {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    /// Sorted edge list (i < j).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in self.neighbors(i) {
                if j > i {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// BFS distances from a source; usize::MAX marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v];
            for u in self.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dv + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}

/// Cayley graph of an abelian group: x is adjacent to x + s for s in S.
/// S must be identity-free and closed under negation.
pub fn cayley_graph(g: &AbelianGroup, s: &ConnectionSet) -> Result<Graph> {
    s.check_symmetric(g)?;
    let n = g.size() as usize;
    let mut graph = Graph::new(n);
    for v in 0..n as u64 {
        for &step in s.members() {
            let u = g.add(v, step);
            if u != v {
                graph.add_edge(v as usize, u as usize);
            }
        }
    }
    Ok(graph)
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<GraphMeta>,
    n: usize,
}

/// Canonical JSON encoding (sorted keys, sorted edge list).
pub fn to_json(g: &Graph) -> String {
    let wire = GraphJson {
        edges: g.edges(),
        meta: g.meta.clone(),
        n: g.n,
    };
    serde_json::to_string(&wire).expect("graph serializes")
}

pub fn from_json(text: &str) -> Result<Graph> {
    let wire: GraphJson =
        serde_json::from_str(text).map_err(|e| Error::GraphJson(e.to_string()))?;
    if wire.n > MAX_VERTICES {
        return Err(Error::GraphJson(format!(
            "order {} exceeds the dense cap",
            wire.n
        )));
    }
    let mut g = Graph::new(wire.n);
    for (a, b) in wire.edges {
        if a >= wire.n || b >= wire.n {
            return Err(Error::GraphJson(format!(
                "edge ({a},{b}) out of range for n = {}",
                wire.n
            )));
        }
        if a == b {
            return Err(Error::GraphJson(format!("loop at vertex {a}")));
        }
        g.add_edge(a, b);
    }
    g.meta = wire.meta;
    Ok(g)
}

/// graph6 encoding (ASCII, upper triangle column-major, 6 bits per byte).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n;
    assert!(n <= 258_047, "graph6 writer supports n <= 258047");
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut filled = 0u8;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

pub fn from_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim_end().as_bytes();
    if bytes.is_empty() {
        return Err(Error::Graph6 {
            offset: 0,
            reason: "empty input".into(),
        });
    }
    let pos: usize;
    let n: usize;
    if bytes[0] == b'~' {
        if bytes.len() >= 2 && bytes[1] == b'~' {
            return Err(Error::Graph6 {
                offset: 1,
                reason: "orders above 2^18 unsupported".into(),
            });
        }
        if bytes.len() < 4 {
            return Err(Error::Graph6 {
                offset: bytes.len(),
                reason: "truncated order".into(),
            });
        }
        let mut val = 0usize;
        for (k, &b) in bytes[1..4].iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(Error::Graph6 {
                    offset: 1 + k,
                    reason: format!("byte {b} out of range"),
                });
            }
            val = (val << 6) | (b - 63) as usize;
        }
        n = val;
        pos = 4;
    } else {
        if !(63..=126).contains(&bytes[0]) {
            return Err(Error::Graph6 {
                offset: 0,
                reason: format!("byte {} out of range", bytes[0]),
            });
        }
        n = (bytes[0] - 63) as usize;
        pos = 1;
    }
    if n > MAX_VERTICES {
        return Err(Error::Graph6 {
            offset: 0,
            reason: format!("order {n} exceeds the dense cap"),
        });
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < pos + nbytes {
        return Err(Error::Graph6 {
            offset: bytes.len(),
            reason: format!("need {} payload bytes, have {}", nbytes, bytes.len() - pos),
        });
    }
    if bytes.len() > pos + nbytes {
        return Err(Error::Graph6 {
            offset: pos + nbytes,
            reason: "trailing bytes after payload".into(),
        });
    }
    let mut g = Graph::new(n);
    let mut bit = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + bit / 6];
            if !(63..=126).contains(&byte) {
                return Err(Error::Graph6 {
                    offset: pos + bit / 6,
                    reason: format!("byte {byte} out of range"),
                });
            }
            let v = (byte - 63) >> (5 - (bit % 6)) & 1;
            if v == 1 {
                g.add_edge(i, j);
            }
            bit += 1;
            if bit > nbits {
                break 'outer;
            }
        }
    }
    Ok(g)
}

/// Reads a graph file, dispatching on extension (.g6 / anything else = JSON).
pub fn read_graph_file(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "g6" || e == "graph6") {
        from_graph6(&text)
    } else {
        from_json(&text)
    }
}

pub fn write_graph_file(path: &Path, g: &Graph) -> Result<()> {
    let text = if path.extension().is_some_and(|e| e == "g6" || e == "graph6") {
        let mut s = to_graph6(g);
        s.push('\n');
        s
    } else {
        let mut s = to_json(g);
        s.push('\n');
        s
    };
    std::fs::write(path, text)?;
    Ok(())
}
