//! Graph serialization: graph6, DIMACS edge format and self-describing JSON.

use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::GeometryGraph;

/// Largest vertex count representable by the 4-byte graph6 size field.
const GRAPH6_MAX: usize = 258047;

/// Encode adjacency as graph6, bit-exact per the de-facto format: the size
/// field, then the upper triangle read column by column, packed into 6-bit
/// groups offset by 63.
pub fn graph6_from_adjacency(adj: &[Vec<u32>]) -> Result<String> {
    let n = adj.len();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else if n <= GRAPH6_MAX {
        out.push(126);
        out.push(63 + ((n >> 12) & 63) as u8);
        out.push(63 + ((n >> 6) & 63) as u8);
        out.push(63 + (n & 63) as u8);
    } else {
        return Err(Error::GraphTooLarge(n));
    }
    let mut group = 0u8;
    let mut bits = 0u8;
    for j in 1..n {
        for i in 0..j {
            let bit = adj[i].binary_search(&(j as u32)).is_ok() as u8;
            group = (group << 1) | bit;
            bits += 1;
            if bits == 6 {
                out.push(63 + group);
                group = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        group <<= 6 - bits;
        out.push(63 + group);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
}

pub fn to_graph6(g: &GeometryGraph) -> Result<String> {
    graph6_from_adjacency(g.adjacency())
}

/// DIMACS edge format: `p edge n m` then one `e u v` line per edge,
/// 1-indexed, ascending.
pub fn dimacs_from_adjacency(adj: &[Vec<u32>]) -> String {
    let n = adj.len();
    let mut lines = Vec::new();
    let mut edges = Vec::new();
    for (v, ns) in adj.iter().enumerate() {
        for &w in ns {
            if (v as u32) < w {
                edges.push((v as u32 + 1, w + 1));
            }
        }
    }
    lines.push(format!("p edge {} {}", n, edges.len()));
    for (u, v) in edges {
        lines.push(format!("e {} {}", u, v));
    }
    lines.join("\n") + "\n"
}

pub fn to_dimacs(g: &GeometryGraph) -> String {
    dimacs_from_adjacency(g.adjacency())
}

/// JSON export: `{vertices, edges, metadata}` with canonical subspace rows
/// as vertex payloads.
pub fn to_json(g: &GeometryGraph) -> serde_json::Value {
    let vertices: Vec<serde_json::Value> = g
        .vertices()
        .iter()
        .map(|s| json!({ "m": s.ambient_dim(), "rows": s.rows() }))
        .collect();
    let mut edges = Vec::new();
    for (v, ns) in g.adjacency().iter().enumerate() {
        for &w in ns {
            if (v as u32) < w {
                edges.push(json!([v, w]));
            }
        }
    }
    json!({
        "vertices": vertices,
        "edges": edges,
        "metadata": g.descriptor(),
    })
}
