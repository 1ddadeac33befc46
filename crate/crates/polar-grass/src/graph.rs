//! Immutable vertex-indexed graphs and the shared graph algorithms:
//! BFS distances, diameter, maximal cliques, geodesics and the
//! abstract-graph conditions from the closing remark checks.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::descriptor::GraphDescriptor;
use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// Raw algorithms over sorted adjacency lists. `GeometryGraph` delegates
/// here; unit tests drive them on synthetic graphs directly.
pub mod algo {
    use super::*;

    pub fn is_symmetric_irreflexive(adj: &[Vec<u32>]) -> bool {
        for (v, ns) in adj.iter().enumerate() {
            for &w in ns {
                if w as usize == v || w as usize >= adj.len() {
                    return false;
                }
                if adj[w as usize].binary_search(&(v as u32)).is_err() {
                    return false;
                }
            }
        }
        true
    }

    pub fn bfs_row(adj: &[Vec<u32>], src: u32) -> Vec<u32> {
        let n = adj.len();
        let mut dist = vec![u32::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            for &w in &adj[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dv + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(adj: &[Vec<u32>]) -> bool {
        if adj.is_empty() {
            return true;
        }
        bfs_row(adj, 0).iter().all(|&d| d != u32::MAX)
    }

    pub fn diameter(adj: &[Vec<u32>]) -> u32 {
        (0..adj.len() as u32)
            .into_par_iter()
            .map(|v| bfs_row(adj, v).into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn all_pairs(adj: &[Vec<u32>]) -> DistanceMatrix {
        let n = adj.len();
        let mut data = vec![0u8; n * n];
        data.par_chunks_mut(n).enumerate().for_each(|(v, row)| {
            let dist = bfs_row(adj, v as u32);
            for (slot, d) in row.iter_mut().zip(dist) {
                debug_assert!(d < u8::MAX as u32, "distance overflowed the u8 matrix");
                *slot = d as u8;
            }
        });
        DistanceMatrix { n, data }
    }

    /// Inclusion-maximal cliques via Bron-Kerbosch with pivoting over a
    /// degeneracy vertex order. Cliques come out sorted internally and
    /// ordered lexicographically.
    pub fn maximal_cliques(adj: &[Vec<u32>], budget: usize) -> Result<Vec<Vec<u32>>> {
        let n = adj.len();
        let order = degeneracy_order(adj);
        let mut position = vec![0usize; n];
        for (pos, &v) in order.iter().enumerate() {
            position[v as usize] = pos;
        }
        let mut out = Vec::new();
        for &v in &order {
            let mut p = Vec::new();
            let mut x = Vec::new();
            for &w in &adj[v as usize] {
                if position[w as usize] > position[v as usize] {
                    p.push(w);
                } else {
                    x.push(w);
                }
            }
            p.sort_unstable();
            x.sort_unstable();
            bron_kerbosch(adj, &mut vec![v], p, x, &mut out, budget)?;
        }
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        Ok(out)
    }

    fn degeneracy_order(adj: &[Vec<u32>]) -> Vec<u32> {
        let n = adj.len();
        let mut degree: Vec<usize> = adj.iter().map(|ns| ns.len()).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (degree[v], v))
                .expect("vertices remain");
            removed[v] = true;
            order.push(v as u32);
            for &w in &adj[v] {
                if !removed[w as usize] {
                    degree[w as usize] -= 1;
                }
            }
        }
        order
    }

    fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    fn bron_kerbosch(
        adj: &[Vec<u32>],
        r: &mut Vec<u32>,
        mut p: Vec<u32>,
        mut x: Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        budget: usize,
    ) -> Result<()> {
        if p.is_empty() && x.is_empty() {
            if out.len() >= budget {
                return Err(Error::BudgetExceeded {
                    predicted: (budget + 1) as u128,
                    budget: budget as u128,
                });
            }
            out.push(r.clone());
            return Ok(());
        }
        // pivot: most candidate-neighbors, ties to the smallest id
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .min_by_key(|&u| {
                (usize::MAX - intersect_sorted(&p, &adj[u as usize]).len(), u)
            })
            .expect("p or x nonempty");
        let candidates: Vec<u32> = p
            .iter()
            .copied()
            .filter(|&v| adj[pivot as usize].binary_search(&v).is_err())
            .collect();
        for v in candidates {
            let nv = &adj[v as usize];
            r.push(v);
            let next_p = intersect_sorted(&p, nv);
            let next_x = intersect_sorted(&x, nv);
            bron_kerbosch(adj, r, next_p, next_x, out, budget)?;
            r.pop();
            let pos = p.binary_search(&v).expect("candidate still pending");
            p.remove(pos);
            let ins = x.binary_search(&v).unwrap_err();
            x.insert(ins, v);
        }
        Ok(())
    }

    /// Up to `limit` geodesics from `v` to `w`, each a vertex path of
    /// length d(v,w)+1, in lexicographic order.
    pub fn geodesics(adj: &[Vec<u32>], v: u32, w: u32, limit: usize) -> Vec<Vec<u32>> {
        let dist_to_w = bfs_row(adj, w);
        let mut out = Vec::new();
        let mut path = vec![v];
        fn dfs(
            adj: &[Vec<u32>],
            dist_to_w: &[u32],
            path: &mut Vec<u32>,
            out: &mut Vec<Vec<u32>>,
            limit: usize,
        ) {
            if out.len() >= limit {
                return;
            }
            let u = *path.last().unwrap();
            if dist_to_w[u as usize] == 0 {
                out.push(path.clone());
                return;
            }
            for &nb in &adj[u as usize] {
                if dist_to_w[nb as usize] + 1 == dist_to_w[u as usize] {
                    path.push(nb);
                    dfs(adj, dist_to_w, path, out, limit);
                    path.pop();
                    if out.len() >= limit {
                        return;
                    }
                }
            }
        }
        dfs(adj, &dist_to_w, &mut path, &mut out, limit);
        out
    }

    pub fn common_neighbors(adj: &[Vec<u32>], v: u32, w: u32) -> Vec<u32> {
        intersect_sorted(&adj[v as usize], &adj[w as usize])
    }

    /// The two closing-remark conditions: distance-2 pairs need more than
    /// one common neighbor and an extendable geodesic; distance >= 3 pairs
    /// need the (u, c1, c2) configuration.
    pub fn remark_conditions(adj: &[Vec<u32>]) -> RemarkReport {
        let matrix = all_pairs(adj);
        let n = adj.len();
        let results: Vec<Option<RemarkFailure>> = (0..n)
            .into_par_iter()
            .map(|v| {
                for w in (v + 1)..n {
                    let d = matrix.get(v, w);
                    if d == 2 {
                        let common = common_neighbors(adj, v as u32, w as u32);
                        if common.len() < 2 {
                            return Some(RemarkFailure {
                                pair: (v as u32, w as u32),
                                reason: "distance-2 pair with fewer than two common neighbors"
                                    .into(),
                            });
                        }
                        let extend_at_w = adj[w].iter().any(|&z| matrix.get(v, z as usize) == 3);
                        let extend_at_v = adj[v].iter().any(|&z| matrix.get(z as usize, w) == 3);
                        if !extend_at_w && !extend_at_v {
                            return Some(RemarkFailure {
                                pair: (v as u32, w as u32),
                                reason: "distance-2 pair whose geodesics cannot be extended"
                                    .into(),
                            });
                        }
                    } else if d >= 3 {
                        let found = (0..n).any(|u| {
                            if matrix.get(v, u) != d - 2 || matrix.get(u, w) != 2 {
                                return false;
                            }
                            let cs = common_neighbors(adj, u as u32, w as u32);
                            cs.iter().enumerate().any(|(idx, &c1)| {
                                cs[idx + 1..].iter().any(|&c2| {
                                    adj[c1 as usize].binary_search(&c2).is_err()
                                })
                            })
                        });
                        if !found {
                            return Some(RemarkFailure {
                                pair: (v as u32, w as u32),
                                reason:
                                    "distance>=3 pair without the (u, c1, c2) configuration"
                                        .into(),
                            });
                        }
                    }
                }
                None
            })
            .collect();

        let mut dist2 = 0usize;
        let mut dist_ge3 = 0usize;
        for v in 0..n {
            for w in (v + 1)..n {
                match matrix.get(v, w) {
                    2 => dist2 += 1,
                    d if d >= 3 => dist_ge3 += 1,
                    _ => {}
                }
            }
        }
        let failure = results.into_iter().flatten().next();
        RemarkReport { pass: failure.is_none(), dist2_pairs: dist2, dist_ge3_pairs: dist_ge3, failure }
    }
}

/// Dense all-pairs distance matrix (u8 entries; all our diameters are tiny).
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u8>,
}

impl DistanceMatrix {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.n + j]
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn max(&self) -> u8 {
        self.data.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RemarkFailure {
    pub pair: (u32, u32),
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RemarkReport {
    pub pass: bool,
    pub dist2_pairs: usize,
    pub dist_ge3_pairs: usize,
    pub failure: Option<RemarkFailure>,
}

/// An immutable graph whose vertices are canonical subspaces.
pub struct GeometryGraph {
    vertices: Vec<Subspace>,
    index: HashMap<Subspace, u32>,
    adj: Vec<Vec<u32>>,
    descriptor: GraphDescriptor,
}

impl GeometryGraph {
    /// Build from an ordered vertex list and an adjacency predicate; the
    /// pair sweep runs in parallel but the result is order-deterministic.
    pub fn build<F>(vertices: Vec<Subspace>, descriptor: GraphDescriptor, pred: F) -> Result<Self>
    where
        F: Fn(&Subspace, &Subspace) -> bool + Sync,
    {
        let n = vertices.len();
        let mut adj: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut ns = Vec::new();
                for j in 0..n {
                    if i != j && pred(&vertices[i], &vertices[j]) {
                        ns.push(j as u32);
                    }
                }
                ns
            })
            .collect();
        for ns in &mut adj {
            ns.sort_unstable();
        }
        Self::from_parts(vertices, adj, descriptor)
    }

    pub fn from_parts(
        vertices: Vec<Subspace>,
        adj: Vec<Vec<u32>>,
        descriptor: GraphDescriptor,
    ) -> Result<Self> {
        if !algo::is_symmetric_irreflexive(&adj) {
            return Err(Error::BadAdjacency);
        }
        if !algo::is_connected(&adj) {
            return Err(Error::NotConnected);
        }
        let index: HashMap<Subspace, u32> =
            vertices.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        if index.len() != vertices.len() {
            return Err(Error::Internal("duplicate vertex payloads".into()));
        }
        Ok(GeometryGraph { vertices, index, adj, descriptor })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|ns| ns.len()).sum::<usize>() / 2
    }
    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }
    pub fn vertex(&self, id: u32) -> Result<&Subspace> {
        self.vertices.get(id as usize).ok_or(Error::UnknownVertex(id))
    }
    pub fn id_of(&self, s: &Subspace) -> Option<u32> {
        self.index.get(s).copied()
    }
    pub fn neighbors(&self, id: u32) -> Result<&[u32]> {
        self.adj.get(id as usize).map(|v| v.as_slice()).ok_or(Error::UnknownVertex(id))
    }
    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }
    pub fn descriptor(&self) -> &GraphDescriptor {
        &self.descriptor
    }
    pub fn degree(&self, id: u32) -> Result<usize> {
        Ok(self.neighbors(id)?.len())
    }
    pub fn are_adjacent(&self, v: u32, w: u32) -> bool {
        self.adj
            .get(v as usize)
            .map(|ns| ns.binary_search(&w).is_ok())
            .unwrap_or(false)
    }

    pub fn bfs_distances_from(&self, v: u32) -> Result<Vec<u32>> {
        if v as usize >= self.vertices.len() {
            return Err(Error::UnknownVertex(v));
        }
        Ok(algo::bfs_row(&self.adj, v))
    }

    pub fn bfs_distance(&self, v: u32, w: u32) -> Result<u32> {
        if w as usize >= self.vertices.len() {
            return Err(Error::UnknownVertex(w));
        }
        Ok(self.bfs_distances_from(v)?[w as usize])
    }

    pub fn diameter(&self) -> u32 {
        algo::diameter(&self.adj)
    }

    pub fn all_pairs_distances(&self, max_vertices: usize) -> Result<DistanceMatrix> {
        if self.vertex_count() > max_vertices {
            return Err(Error::BudgetExceeded {
                predicted: self.vertex_count() as u128,
                budget: max_vertices as u128,
            });
        }
        Ok(algo::all_pairs(&self.adj))
    }

    pub fn maximal_cliques(&self, budget: usize) -> Result<Vec<Vec<u32>>> {
        algo::maximal_cliques(&self.adj, budget)
    }

    pub fn geodesics_between(&self, v: u32, w: u32, limit: usize) -> Result<Vec<Vec<u32>>> {
        if v as usize >= self.vertices.len() {
            return Err(Error::UnknownVertex(v));
        }
        if w as usize >= self.vertices.len() {
            return Err(Error::UnknownVertex(w));
        }
        Ok(algo::geodesics(&self.adj, v, w, limit.max(1)))
    }

    pub fn check_remark_conditions(&self, max_vertices: usize) -> Result<RemarkReport> {
        if self.vertex_count() > max_vertices {
            return Err(Error::BudgetExceeded {
                predicted: self.vertex_count() as u128,
                budget: max_vertices as u128,
            });
        }
        Ok(algo::remark_conditions(&self.adj))
    }
}

#[cfg(test)]
mod tests {
    use super::algo::*;
    use super::*;

    fn from_edges(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for ns in &mut adj {
            ns.sort_unstable();
        }
        adj
    }

    fn cycle(n: u32) -> Vec<Vec<u32>> {
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        from_edges(n as usize, &edges)
    }

    fn complete(n: u32) -> Vec<Vec<u32>> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        from_edges(n as usize, &edges)
    }

    #[test]
    fn bfs_basics() {
        let adj = cycle(6);
        let d = bfs_row(&adj, 0);
        assert_eq!(d, vec![0, 1, 2, 3, 2, 1]);
        assert_eq!(diameter(&adj), 3);
        assert!(is_connected(&adj));
    }

    #[test]
    fn cliques_on_k4() {
        let cliques = maximal_cliques(&complete(4), 100).unwrap();
        assert_eq!(cliques, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn cliques_on_c4_are_the_four_edges() {
        let cliques = maximal_cliques(&cycle(4), 100).unwrap();
        assert_eq!(cliques.len(), 4);
        assert!(cliques.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn clique_budget() {
        assert!(matches!(
            maximal_cliques(&cycle(6), 3),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn geodesics_on_a_cycle() {
        let adj = cycle(6);
        // antipodal vertices: two geodesics around the cycle
        let gs = geodesics(&adj, 0, 3, 10);
        assert_eq!(gs.len(), 2);
        for g in &gs {
            assert_eq!(g.len(), 4);
            assert_eq!(g[0], 0);
            assert_eq!(g[3], 3);
            for w in g.windows(2) {
                assert!(adj[w[0] as usize].binary_search(&w[1]).is_ok());
            }
        }
        // trivial cases
        assert_eq!(geodesics(&adj, 2, 2, 10), vec![vec![2]]);
        assert_eq!(geodesics(&adj, 0, 1, 10), vec![vec![0, 1]]);
    }

    #[test]
    fn remark_conditions_fail_on_six_cycle() {
        let report = remark_conditions(&cycle(6));
        assert!(!report.pass);
        let failure = report.failure.unwrap();
        assert!(failure.reason.contains("common neighbors"));
    }

    #[test]
    fn remark_conditions_pass_vacuously_on_complete_graph() {
        let report = remark_conditions(&complete(5));
        assert!(report.pass);
        assert_eq!(report.dist2_pairs, 0);
        assert_eq!(report.dist_ge3_pairs, 0);
    }

    #[test]
    fn all_pairs_matches_bfs() {
        let adj = cycle(7);
        let m = all_pairs(&adj);
        for v in 0..7 {
            let row = bfs_row(&adj, v as u32);
            for w in 0..7 {
                assert_eq!(m.get(v, w) as u32, row[w]);
            }
        }
    }
}
