//! Dual graphs of nodal curves and their purely graph-theoretic invariants.
//!
//! A nodal curve is modelled by its dual graph: one vertex per irreducible
//! component, weighted by the geometric genus of that component, and one edge
//! per node. Loops (a component glued to itself) and parallel edges (two
//! components meeting at several points) are both allowed.

use std::fmt;
use std::fmt::Write as _;

use crate::error::Error;
use crate::Result;

/// Hard limit imposed by the `u32` bitset backing [`Subcurve`].
pub const MAX_GAMMA: usize = 31;

/// Default cap on the number of components for subset enumerations.
pub const DEFAULT_GAMMA_CAP: usize = 20;

/// An irreducible component: declared id plus geometric genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: i64,
}

/// A node of the curve: an unordered pair of component indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: (usize, usize),
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }
}

/// Weighted multigraph model of a nodal curve.
///
/// Vertex and edge order is the declaration order and is canonical: every
/// multidegree, subcurve bitset and node set refers to these indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    name: Option<String>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

/// A subcurve: a set of components, stored as a bitset over vertex indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subcurve(pub u32);

impl Subcurve {
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut mask = 0u32;
        for i in indices {
            assert!(i < MAX_GAMMA + 1, "vertex index {i} out of bitset range");
            mask |= 1 << i;
        }
        Subcurve(mask)
    }

    pub fn full(gamma: usize) -> Self {
        Subcurve(low_bits(gamma))
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn complement(&self, gamma: usize) -> Subcurve {
        Subcurve(!self.0 & low_bits(gamma))
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }
}

fn low_bits(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A set of nodes, stored as sorted, deduplicated edge indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet(Vec<usize>);

impl NodeSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        NodeSet(indices)
    }

    pub fn empty() -> Self {
        NodeSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

/// Result of blowing up a curve at a node set: the new graph plus the
/// bookkeeping needed to restrict multidegrees back to the strict transform.
#[derive(Debug, Clone)]
pub struct BlowUp {
    /// The curve that was blown up.
    pub base: DualGraph,
    pub graph: DualGraph,
    /// Indices of the exceptional vertices, in node-set order.
    pub exceptional: Vec<usize>,
    /// The blown-up node set on the original curve.
    pub nodes: NodeSet,
}

impl BlowUp {
    /// Number of vertices of the original curve (they keep their indices).
    pub fn base_gamma(&self) -> usize {
        self.base.gamma()
    }
}

/// Stability classes and related markers of a dual graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub connected: bool,
    pub stable: bool,
    pub quasistable: bool,
    pub semistable: bool,
    pub binary: bool,
    pub compact_type: bool,
    /// Edge indices whose node is separating (bridges; a loop never is).
    pub separating_nodes: Vec<usize>,
    /// Vertex indices of exceptional components: genus 0, exactly two
    /// incidences, both on non-loop edges.
    pub exceptional_components: Vec<usize>,
}

impl DualGraph {
    /// Builds a graph from genera and edge endpoint pairs, with generated ids
    /// `v0, v1, ...` / `e0, e1, ...`.
    pub fn new(genera: Vec<i64>, ends: Vec<(usize, usize)>) -> Result<Self> {
        let vertices = genera
            .into_iter()
            .enumerate()
            .map(|(i, genus)| Vertex {
                id: format!("v{i}"),
                genus,
            })
            .collect();
        let edges = ends
            .into_iter()
            .enumerate()
            .map(|(i, ends)| Edge {
                id: format!("e{i}"),
                ends,
            })
            .collect();
        Self::from_parts(None, vertices, edges)
    }

    pub fn from_parts(name: Option<String>, vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("a curve needs at least one component".into()));
        }
        for v in &vertices {
            if v.genus < 0 {
                return Err(Error::InvalidInput(format!("vertex `{}` has negative genus", v.id)));
            }
        }
        for e in &edges {
            if e.ends.0 >= vertices.len() {
                return Err(Error::VertexOutOfRange(e.ends.0));
            }
            if e.ends.1 >= vertices.len() {
                return Err(Error::VertexOutOfRange(e.ends.1));
            }
        }
        Ok(DualGraph { name, vertices, edges })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Number of components, written gamma throughout.
    pub fn gamma(&self) -> usize {
        self.vertices.len()
    }

    /// Number of nodes, written delta throughout.
    pub fn delta(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_genus(&self, v: usize) -> i64 {
        self.vertices[v].genus
    }

    /// Number of special points on the normalization of component `v`:
    /// loops count twice.
    pub fn vertex_degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.ends.0 == v) as usize + (e.ends.1 == v) as usize)
            .sum()
    }

    /// Bitset of neighbours of `v` (not including `v` itself unless a loop).
    fn adjacency(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.gamma()];
        for e in &self.edges {
            adj[e.ends.0] |= 1 << e.ends.1;
            adj[e.ends.1] |= 1 << e.ends.0;
        }
        adj
    }

    /// Connected components as subcurves, ordered by smallest vertex index.
    pub fn connected_components(&self) -> Vec<Subcurve> {
        let adj = self.adjacency();
        let gamma = self.gamma();
        let mut seen = 0u32;
        let mut out = Vec::new();
        for v in 0..gamma {
            if seen >> v & 1 == 1 {
                continue;
            }
            let comp = reachable(&adj, 1 << v, low_bits(gamma));
            seen |= comp;
            out.push(Subcurve(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Arithmetic genus `sum g_i + delta - gamma + 1` of a connected curve.
    pub fn genus(&self) -> Result<i64> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.genus_unchecked())
    }

    fn genus_unchecked(&self) -> i64 {
        let gsum: i64 = self.vertices.iter().map(|v| v.genus).sum();
        gsum + self.delta() as i64 - self.gamma() as i64 + 1
    }

    /// Arithmetic genus of each connected component, in component order.
    pub fn component_genera(&self) -> Vec<i64> {
        self.connected_components()
            .iter()
            .map(|&z| self.induced_genus(z))
            .collect()
    }

    /// Genus of the induced subgraph on a connected vertex set.
    fn induced_genus(&self, z: Subcurve) -> i64 {
        let gsum: i64 = z.indices().map(|v| self.vertices[v].genus).sum();
        let internal = self
            .edges
            .iter()
            .filter(|e| z.contains(e.ends.0) && z.contains(e.ends.1))
            .count() as i64;
        gsum + internal - z.len() as i64 + 1
    }

    /// `(delta_Z, g_Z, w_Z)` for a non-empty subcurve `Z`.
    ///
    /// `delta_Z` counts edges meeting both `Z` and its complement (a loop
    /// contributes nothing), `g_Z` is the genus of the induced subgraph with
    /// disconnected pieces combined as `sum(component genera) - #pieces + 1`,
    /// and `w_Z = 2 g_Z - 2 + delta_Z` is the degree of the dualizing sheaf.
    pub fn subcurve_invariants(&self, z: Subcurve) -> Result<(i64, i64, i64)> {
        if z.is_empty() {
            return Err(Error::EmptySubcurve);
        }
        let delta_z = self.boundary_size(z);
        let pieces = self.induced_components(z);
        let g_z: i64 =
            pieces.iter().map(|&p| self.induced_genus(p)).sum::<i64>() - pieces.len() as i64 + 1;
        Ok((delta_z, g_z, 2 * g_z - 2 + delta_z))
    }

    /// Number of edges with exactly one endpoint in `z`.
    pub fn boundary_size(&self, z: Subcurve) -> i64 {
        self.edges
            .iter()
            .filter(|e| z.contains(e.ends.0) != z.contains(e.ends.1))
            .count() as i64
    }

    /// Connected components of the subgraph induced on `z`.
    fn induced_components(&self, z: Subcurve) -> Vec<Subcurve> {
        let adj = self.adjacency();
        let mut rest = z.0;
        let mut out = Vec::new();
        while rest != 0 {
            let v = rest.trailing_zeros();
            let comp = reachable(&adj, 1 << v, z.0);
            rest &= !comp;
            out.push(Subcurve(comp));
        }
        out
    }

    /// Bridges of the multigraph: edges whose deletion disconnects their
    /// component. Parallel edges and loops are never bridges.
    pub fn bridges(&self) -> Vec<usize> {
        let gamma = self.gamma();
        let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); gamma];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.ends.0].push((i, e.ends.1));
            if !e.is_loop() {
                incident[e.ends.1].push((i, e.ends.0));
            }
        }
        let mut disc = vec![usize::MAX; gamma];
        let mut low = vec![usize::MAX; gamma];
        let mut time = 0usize;
        let mut bridges = Vec::new();
        // Iterative DFS; each stack frame remembers which incidence we resume at.
        for root in 0..gamma {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(&mut (u, via, ref mut idx)) = stack.last_mut() {
                if *idx < incident[u].len() {
                    let (e, w) = incident[u][*idx];
                    *idx += 1;
                    if e == via {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, e, 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (parent, _, _)) = stack.last_mut() {
                        low[parent] = low[parent].min(low[u]);
                        if low[u] > disc[parent] {
                            bridges.push(via);
                        }
                    }
                }
            }
        }
        bridges.sort_unstable();
        bridges
    }

    /// Exceptional components: genus 0, exactly two incidences, no loop.
    pub fn exceptional_components(&self) -> Vec<usize> {
        (0..self.gamma())
            .filter(|&v| {
                self.vertices[v].genus == 0
                    && self.vertex_degree(v) == 2
                    && !self.edges.iter().any(|e| e.is_loop() && e.ends.0 == v)
            })
            .collect()
    }

    /// Full stability classification.
    pub fn classify(&self) -> Classification {
        let connected = self.is_connected();
        let genus = self.genus_unchecked();
        let rational_degrees_ok = |min: usize| {
            (0..self.gamma()).all(|v| self.vertices[v].genus > 0 || self.vertex_degree(v) >= min)
        };
        let exceptional = self.exceptional_components();
        let exc_mask = Subcurve::from_indices(exceptional.iter().copied());
        let exceptional_adjacent = self
            .edges
            .iter()
            .any(|e| !e.is_loop() && exc_mask.contains(e.ends.0) && exc_mask.contains(e.ends.1));
        let semistable = connected && rational_degrees_ok(2);
        let quasistable = semistable && !exceptional_adjacent;
        let stable = connected && genus >= 2 && rational_degrees_ok(3);
        let compact_type = connected && self.delta() == self.gamma() - 1;
        let binary = self.gamma() == 2
            && self.vertices.iter().all(|v| v.genus == 0)
            && !self.edges.iter().any(|e| e.is_loop())
            && self.delta() >= 1;
        Classification {
            connected,
            stable,
            quasistable,
            semistable,
            binary,
            compact_type,
            separating_nodes: self.bridges(),
            exceptional_components: exceptional,
        }
    }

    /// Blows up the curve at the nodes in `s`: each such node is replaced by
    /// a genus-0 component joined to the two branches. Vertex order is
    /// preserved, exceptional vertices are appended in node-set order, and
    /// the arithmetic genus does not change.
    pub fn blow_up(&self, s: &NodeSet) -> Result<BlowUp> {
        self.check_edges(s)?;
        let mut vertices = self.vertices.clone();
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !s.contains(*i))
            .map(|(_, e)| e.clone())
            .collect();
        let mut exceptional = Vec::with_capacity(s.len());
        for e in s.iter() {
            let (u, v) = self.edges[e].ends;
            let ev = vertices.len();
            vertices.push(Vertex {
                id: format!("E_{}", self.edges[e].id),
                genus: 0,
            });
            edges.push(Edge {
                id: format!("{}a", self.edges[e].id),
                ends: (u, ev),
            });
            edges.push(Edge {
                id: format!("{}b", self.edges[e].id),
                ends: (ev, v),
            });
            exceptional.push(ev);
        }
        Ok(BlowUp {
            base: self.clone(),
            graph: DualGraph {
                name: self.name.clone(),
                vertices,
                edges,
            },
            exceptional,
            nodes: s.clone(),
        })
    }

    /// Normalizes the curve at the nodes in `s`: the edges are deleted.
    /// The result may be disconnected.
    pub fn normalize(&self, s: &NodeSet) -> Result<DualGraph> {
        self.check_edges(s)?;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !s.contains(*i))
            .map(|(_, e)| e.clone())
            .collect();
        Ok(DualGraph {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            edges,
        })
    }

    fn check_edges(&self, s: &NodeSet) -> Result<()> {
        match s.iter().find(|&e| e >= self.delta()) {
            Some(e) => Err(Error::EdgeOutOfRange(e)),
            None => Ok(()),
        }
    }

    /// Every non-empty vertex subset inducing a connected subgraph, the full
    /// curve included, in increasing bitset order.
    pub fn connected_subcurves(&self) -> Result<Vec<Subcurve>> {
        self.connected_subcurves_with_cap(DEFAULT_GAMMA_CAP)
    }

    pub fn connected_subcurves_with_cap(&self, cap: usize) -> Result<Vec<Subcurve>> {
        let gamma = self.gamma();
        if gamma > cap.min(MAX_GAMMA) {
            return Err(Error::CapExceeded {
                what: "components (2^gamma subcurves)",
                size: gamma,
                cap: cap.min(MAX_GAMMA),
            });
        }
        let adj = self.adjacency();
        let all = low_bits(gamma);
        let mut out = Vec::new();
        for mask in 1..=all {
            let start = mask & mask.wrapping_neg();
            if reachable(&adj, start, mask) == mask {
                out.push(Subcurve(mask));
            }
        }
        Ok(out)
    }

    /// Renders the canonical curve-file description of the graph.
    pub fn to_curve_string(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "curve {name}");
        }
        for v in &self.vertices {
            let _ = writeln!(out, "vertex {} genus {}", v.id, v.genus);
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "edge {} {} {}",
                e.id, self.vertices[e.ends.0].id, self.vertices[e.ends.1].id
            );
        }
        out
    }

    /// Parses the line-oriented curve file format.
    ///
    /// `# comment`, `curve <name>` (optional, once),
    /// `vertex <id> genus <int>=0>`, `edge <id> <vertex-id> <vertex-id>`.
    /// Declaration order is the canonical vertex/edge order.
    pub fn parse(text: &str) -> Result<DualGraph> {
        let mut name: Option<String> = None;
        let mut vertices: Vec<Vertex> = Vec::new();
        let mut pending_edges: Vec<(usize, String, String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            match tokens[0] {
                "curve" => {
                    if tokens.len() != 2 {
                        return parse_err(line, "expected `curve <name>`");
                    }
                    if name.is_some() {
                        return parse_err(line, "duplicate `curve` declaration");
                    }
                    name = Some(tokens[1].to_string());
                }
                "vertex" => {
                    if tokens.len() != 4 || tokens[2] != "genus" {
                        return parse_err(line, "expected `vertex <id> genus <int>`");
                    }
                    let genus: i64 = tokens[3]
                        .parse()
                        .map_err(|_| parse_error(line, format!("bad genus `{}`", tokens[3])))?;
                    if genus < 0 {
                        return parse_err(line, "negative genus");
                    }
                    if vertices.iter().any(|v| v.id == tokens[1]) {
                        return parse_err(line, format!("duplicate vertex id `{}`", tokens[1]));
                    }
                    vertices.push(Vertex {
                        id: tokens[1].to_string(),
                        genus,
                    });
                }
                "edge" => {
                    if tokens.len() != 4 {
                        return parse_err(line, "expected `edge <id> <vertex> <vertex>`");
                    }
                    if pending_edges.iter().any(|(_, id, _, _)| id == tokens[1]) {
                        return parse_err(line, format!("duplicate edge id `{}`", tokens[1]));
                    }
                    pending_edges.push((
                        line,
                        tokens[1].to_string(),
                        tokens[2].to_string(),
                        tokens[3].to_string(),
                    ));
                }
                other => return parse_err(line, format!("unknown directive `{other}`")),
            }
        }
        if vertices.is_empty() {
            return parse_err(0, "no vertices declared");
        }
        let lookup = |line: usize, id: &str| -> Result<usize> {
            vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| Error::DanglingVertex {
                    line,
                    vertex: id.to_string(),
                })
        };
        let mut edges = Vec::with_capacity(pending_edges.len());
        for (line, id, a, b) in pending_edges {
            edges.push(Edge {
                id,
                ends: (lookup(line, &a)?, lookup(line, &b)?),
            });
        }
        DualGraph::from_parts(name, vertices, edges)
    }

    /// Joined edge ids for a node set, `-` when empty.
    pub fn node_set_label(&self, s: &NodeSet) -> String {
        if s.is_empty() {
            "-".to_string()
        } else {
            s.iter()
                .map(|e| self.edges[e].id.as_str())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(parse_error(line, msg))
}

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Vertices reachable from `start` inside `within`, as a bitset fixpoint.
fn reachable(adj: &[u32], start: u32, within: u32) -> u32 {
    let mut reach = start & within;
    loop {
        let mut next = reach;
        let mut rest = reach;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            next |= adj[v] & within;
        }
        if next == reach {
            return reach;
        }
        reach = next;
    }
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (gamma={}, delta={})",
            self.name.as_deref().unwrap_or("curve"),
            self.gamma(),
            self.delta()
        )
    }
}
