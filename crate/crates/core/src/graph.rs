//! Interaction graphs, the named graph families and structure detection.
//!
//! Vertex numbering per family is fixed so that schedules are reproducible:
//!
//! | family                         | numbering                                          |
//! |--------------------------------|----------------------------------------------------|
//! | `chain(n)`                     | `0..n` in order                                    |
//! | `triangular_ladder(n)`         | `0..n`, `i ~ i+1` and `i ~ i+2`                    |
//! | `hair_comb(n)`                 | backbone `0..n`, tooth of `i` is `n + i`           |
//! | `cycle(n)`                     | `0..n` around the cycle                            |
//! | `cycle_with_pendant(n, a)`     | cycle `0..n`, pendant `n` attached to `a`          |
//! | `chain_with_pendant(n, a)`     | chain `0..n`, pendant `n` attached to `a`          |
//! | `star(n)`                      | hub `0`, leaves `1..n`                             |
//! | `wheel(n)`                     | hub `0`, rim `1..=n` around the cycle              |
//! | `complete_binary_tree(d)`      | heap order: children of `i` are `2i+1`, `2i+2`     |
//! | `square_lattice(w, h)`         | `(x, y) ↦ y·w + x`                                 |

use std::collections::{BTreeSet, VecDeque};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Per-vertex role in a placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Role {
    Computational,
    AncillaZero,
    AncillaPlus,
    #[default]
    Unassigned,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Computational => "computational",
            Role::AncillaZero => "ancilla_zero",
            Role::AncillaPlus => "ancilla_plus",
            Role::Unassigned => "unassigned",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "computational" => Ok(Role::Computational),
            "ancilla_zero" => Ok(Role::AncillaZero),
            "ancilla_plus" => Ok(Role::AncillaPlus),
            "unassigned" => Ok(Role::Unassigned),
            other => Err(Error::Validation(format!("unknown role '{other}'"))),
        }
    }
}

/// An undirected simple graph of qubit sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
    adjacency: Vec<Vec<Vertex>>,
    roles: Vec<Role>,
}

impl InteractionGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Validation(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop at vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::Validation(format!("duplicate edge ({u},{v})")));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { n, edges: set, adjacency, roles: vec![Role::Unassigned; n] })
    }

    pub fn with_roles(mut self, roles: Vec<Role>) -> Result<Self> {
        if roles.len() != self.n {
            return Err(Error::Validation(format!("{} roles for {} vertices", roles.len(), self.n)));
        }
        self.roles = roles;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn has_roles(&self) -> bool {
        self.roles.iter().any(|r| *r != Role::Unassigned)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0, |_| true).len() == self.n
    }

    /// Vertices reachable from `start` through vertices accepted by `allowed`.
    pub fn component_of(&self, start: Vertex, allowed: impl Fn(Vertex) -> bool) -> Vec<Vertex> {
        let mut seen = vec![false; self.n];
        let mut out = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            i += 1;
            for &w in &self.adjacency[u] {
                if !seen[w] && allowed(w) {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        out
    }

    /// Short stable fingerprint of the vertex count and edge set.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("{}", self.n).as_bytes());
        for (u, v) in &self.edges {
            hasher.update(format!(";{u}-{v}").as_bytes());
        }
        let digest = hasher.finalize();
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::Validation(format!("vertex {v} out of range for n={}", self.n)))
        }
    }
}

/// Named graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFamily {
    Chain(usize),
    TriangularLadder(usize),
    HairComb(usize),
    Cycle(usize),
    CycleWithPendant { n: usize, attach: Vertex },
    ChainWithPendant { n: usize, attach: Vertex },
    Star(usize),
    Wheel(usize),
    CompleteBinaryTree(usize),
    SquareLattice { width: usize, height: usize },
}

fn need(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Validation(what.to_string()))
    }
}

pub fn build_family(family: GraphFamily) -> Result<InteractionGraph> {
    use GraphFamily::*;
    match family {
        Chain(n) => {
            need(n >= 2, "chain needs n >= 2")?;
            InteractionGraph::new(n, (0..n - 1).map(|i| (i, i + 1)))
        }
        TriangularLadder(n) => {
            need(n >= 3, "triangular ladder needs n >= 3")?;
            let near = (0..n - 1).map(|i| (i, i + 1));
            let next = (0..n - 2).map(|i| (i, i + 2));
            InteractionGraph::new(n, near.chain(next))
        }
        HairComb(n) => {
            need(n >= 1, "hair comb needs n >= 1")?;
            let backbone = (0..n.saturating_sub(1)).map(|i| (i, i + 1));
            let teeth = (0..n).map(|i| (i, n + i));
            InteractionGraph::new(2 * n, backbone.chain(teeth))
        }
        Cycle(n) => {
            need(n >= 3, "cycle needs n >= 3")?;
            InteractionGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        CycleWithPendant { n, attach } => {
            need(n >= 3, "cycle with pendant needs n >= 3")?;
            need(attach < n, "attach vertex must lie on the cycle")?;
            let edges = (0..n).map(|i| (i, (i + 1) % n)).chain(std::iter::once((attach, n)));
            InteractionGraph::new(n + 1, edges)
        }
        ChainWithPendant { n, attach } => {
            need(n >= 3, "chain with pendant needs n >= 3")?;
            need(attach < n, "attach vertex must lie on the chain")?;
            let edges = (0..n - 1).map(|i| (i, i + 1)).chain(std::iter::once((attach, n)));
            InteractionGraph::new(n + 1, edges)
        }
        Star(n) => {
            need(n >= 3, "star needs n >= 3 vertices")?;
            InteractionGraph::new(n, (1..n).map(|i| (0, i)))
        }
        Wheel(n) => {
            need(n >= 3, "wheel needs a rim of n >= 3")?;
            let spokes = (1..=n).map(|i| (0, i));
            let rim = (1..=n).map(|i| (i, if i == n { 1 } else { i + 1 }));
            InteractionGraph::new(n + 1, spokes.chain(rim))
        }
        CompleteBinaryTree(depth) => {
            need((1..=16).contains(&depth), "binary tree depth must be in 1..=16")?;
            let count = (1usize << (depth + 1)) - 1;
            InteractionGraph::new(count, (1..count).map(|i| ((i - 1) / 2, i)))
        }
        SquareLattice { width, height } => {
            need(width >= 1 && height >= 1 && width * height >= 2, "lattice needs at least 2 sites")?;
            let mut edges = Vec::new();
            for y in 0..height {
                for x in 0..width {
                    let v = y * width + x;
                    if x + 1 < width {
                        edges.push((v, v + 1));
                    }
                    if y + 1 < height {
                        edges.push((v, v + width));
                    }
                }
            }
            InteractionGraph::new(width * height, edges)
        }
    }
}

/// A degree-one pendant attached to a spine vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TStructure {
    pub spine: Vertex,
    pub pendant: Vertex,
}

/// All `(spine, pendant)` pairs with a degree-one pendant, sorted by spine.
pub fn find_t_structures(g: &InteractionGraph) -> Vec<TStructure> {
    let mut out: Vec<TStructure> = (0..g.vertex_count())
        .filter(|&p| g.degree(p) == 1)
        .map(|p| TStructure { spine: g.neighbors(p)[0], pendant: p })
        .collect();
    out.sort_by_key(|t| (t.spine, t.pendant));
    out
}

/// Result of a budgeted exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Search completed; the value is exact.
    Exact(usize),
    /// Budget exhausted; the value is the best lower bound found.
    Unknown { lower_bound: usize },
}

/// Enumerates simple cycles (each once per rotation start, both directions),
/// calling `visit` with the vertex sequence. Returns `false` when the
/// node-expansion budget ran out before the search finished.
pub fn search_cycles(g: &InteractionGraph, budget: u64, mut visit: impl FnMut(&[Vertex])) -> bool {
    let n = g.vertex_count();
    let mut expansions = 0u64;
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(n);
    for start in 0..n {
        path.clear();
        path.push(start);
        on_path[start] = true;
        let ok = cycle_dfs(g, start, &mut path, &mut on_path, &mut expansions, budget, &mut visit);
        on_path[start] = false;
        if !ok {
            return false;
        }
    }
    true
}

fn cycle_dfs(
    g: &InteractionGraph,
    start: Vertex,
    path: &mut Vec<Vertex>,
    on_path: &mut [bool],
    expansions: &mut u64,
    budget: u64,
    visit: &mut impl FnMut(&[Vertex]),
) -> bool {
    *expansions += 1;
    if *expansions > budget {
        return false;
    }
    let last = *path.last().unwrap();
    for &w in g.neighbors(last) {
        if w == start && path.len() >= 3 {
            visit(path);
        } else if w > start && !on_path[w] {
            on_path[w] = true;
            path.push(w);
            let ok = cycle_dfs(g, start, path, on_path, expansions, budget, visit);
            path.pop();
            on_path[w] = false;
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Enumerates simple paths (length ≥ 1 vertex) inside vertices accepted by
/// `allowed`. Same budget semantics as [`search_cycles`].
pub fn search_paths(
    g: &InteractionGraph,
    budget: u64,
    allowed: impl Fn(Vertex) -> bool,
    mut visit: impl FnMut(&[Vertex]),
) -> bool {
    fn dfs(
        g: &InteractionGraph,
        path: &mut Vec<Vertex>,
        on_path: &mut [bool],
        allowed: &dyn Fn(Vertex) -> bool,
        expansions: &mut u64,
        budget: u64,
        visit: &mut dyn FnMut(&[Vertex]),
    ) -> bool {
        *expansions += 1;
        if *expansions > budget {
            return false;
        }
        visit(path);
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if !on_path[w] && allowed(w) {
                on_path[w] = true;
                path.push(w);
                let ok = dfs(g, path, on_path, allowed, expansions, budget, visit);
                path.pop();
                on_path[w] = false;
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let n = g.vertex_count();
    let mut expansions = 0;
    let mut on_path = vec![false; n];
    for start in (0..n).filter(|&v| allowed(v)) {
        let mut path = vec![start];
        on_path[start] = true;
        let ok = dfs(g, &mut path, &mut on_path, &allowed, &mut expansions, budget, &mut visit);
        on_path[start] = false;
        if !ok {
            return false;
        }
    }
    true
}

/// Exact longest cycle length (0 when acyclic) unless the budget runs out.
pub fn longest_cycle_exact(g: &InteractionGraph, budget: u64) -> SearchOutcome {
    let mut best = 0;
    let done = search_cycles(g, budget, |c| best = best.max(c.len()));
    if done {
        SearchOutcome::Exact(best)
    } else {
        SearchOutcome::Unknown { lower_bound: best }
    }
}

/// Breadth-first shortest path; neighbors are scanned in ascending id order.
pub fn shortest_path(g: &InteractionGraph, from: Vertex, to: Vertex) -> Result<Vec<Vertex>> {
    g.check_vertex(from)?;
    g.check_vertex(to)?;
    let mut parent = vec![usize::MAX; g.vertex_count()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &w in g.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    if parent[to] == usize::MAX {
        return Err(Error::Topology(format!("vertices {from} and {to} are disconnected")));
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    Ok(path)
}

/// Backbone and teeth of a hair comb: `teeth[i]` is the pendant of `backbone[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HairCombShape {
    pub backbone: Vec<Vertex>,
    pub teeth: Vec<Vertex>,
}

/// Recognizes a hair comb with a backbone of at least three vertices.
pub fn detect_hair_comb(g: &InteractionGraph) -> Option<HairCombShape> {
    let n = g.vertex_count();
    if n % 2 != 0 || n < 6 || g.edge_count() != n - 1 || !g.is_connected() {
        return None;
    }
    let is_tooth = |v: Vertex| g.degree(v) == 1;
    let spines: Vec<Vertex> = (0..n).filter(|&v| !is_tooth(v)).collect();
    if spines.len() * 2 != n {
        return None;
    }
    let mut tooth_of = vec![None; n];
    for t in (0..n).filter(|&v| is_tooth(v)) {
        let s = g.neighbors(t)[0];
        if is_tooth(s) || tooth_of[s].is_some() {
            return None;
        }
        tooth_of[s] = Some(t);
    }
    let backbone = order_path(g, &spines)?;
    let teeth = backbone.iter().map(|&s| tooth_of[s]).collect::<Option<Vec<_>>>()?;
    Some(HairCombShape { backbone, teeth })
}

/// Orders `vertices` as a simple path in the induced subgraph, starting from
/// the endpoint with the smaller id.
fn order_path(g: &InteractionGraph, vertices: &[Vertex]) -> Option<Vec<Vertex>> {
    let mut inside = vec![false; g.vertex_count()];
    for &v in vertices {
        inside[v] = true;
    }
    let deg_in = |v: Vertex| g.neighbors(v).iter().filter(|&&w| inside[w]).count();
    if vertices.len() == 1 {
        return Some(vertices.to_vec());
    }
    let ends: Vec<Vertex> = vertices.iter().copied().filter(|&v| deg_in(v) == 1).collect();
    if ends.len() != 2 || vertices.iter().any(|&v| deg_in(v) > 2) {
        return None;
    }
    let mut path = vec![ends[0].min(ends[1])];
    let mut prev = usize::MAX;
    while path.len() < vertices.len() {
        let cur = *path.last().unwrap();
        let next = g.neighbors(cur).iter().copied().find(|&w| inside[w] && w != prev)?;
        prev = cur;
        path.push(next);
    }
    Some(path)
}

/// A cycle with exactly one pendant attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclePendantShape {
    /// Cycle vertices in cyclic order, starting at the attach vertex.
    pub cycle: Vec<Vertex>,
    pub pendant: Vertex,
}

pub fn detect_cycle_with_pendant(g: &InteractionGraph) -> Option<CyclePendantShape> {
    let n = g.vertex_count();
    if n < 4 || g.edge_count() != n || !g.is_connected() {
        return None;
    }
    let leaves: Vec<Vertex> = (0..n).filter(|&v| g.degree(v) == 1).collect();
    if leaves.len() != 1 {
        return None;
    }
    let pendant = leaves[0];
    let attach = g.neighbors(pendant)[0];
    if g.degree(attach) != 3 || (0..n).any(|v| v != attach && v != pendant && g.degree(v) != 2) {
        return None;
    }
    let mut cycle = vec![attach];
    let mut prev = pendant;
    loop {
        let cur = *cycle.last().unwrap();
        let next = g.neighbors(cur).iter().copied().find(|&w| w != prev && w != pendant)?;
        if next == attach {
            break;
        }
        prev = cur;
        cycle.push(next);
    }
    (cycle.len() == n - 1).then_some(CyclePendantShape { cycle, pendant })
}

/// A simple chain with one pendant attached to chain vertex `chain[attach_index]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainPendantShape {
    pub chain: Vec<Vertex>,
    pub attach_index: usize,
    pub pendant: Vertex,
}

impl ChainPendantShape {
    pub fn attach(&self) -> Vertex {
        self.chain[self.attach_index]
    }

    pub fn at_endpoint(&self) -> bool {
        self.attach_index == 0 || self.attach_index + 1 == self.chain.len()
    }
}

/// Recognizes a chain of at least three vertices with one pendant. Among
/// interchangeable single-vertex legs the highest id is taken as the pendant;
/// the chain starts at its smaller-id endpoint.
pub fn detect_chain_with_pendant(g: &InteractionGraph) -> Option<ChainPendantShape> {
    let n = g.vertex_count();
    if n < 4 || g.edge_count() != n - 1 || !g.is_connected() {
        return None;
    }
    let hubs: Vec<Vertex> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
    if hubs.len() != 1 || g.degree(hubs[0]) != 3 {
        return None;
    }
    let hub = hubs[0];
    let pendant = g.neighbors(hub).iter().copied().filter(|&w| g.degree(w) == 1).max()?;
    let rest: Vec<Vertex> = (0..n).filter(|&v| v != pendant).collect();
    let chain = order_path(g, &rest)?;
    let attach_index = chain.iter().position(|&v| v == hub)?;
    Some(ChainPendantShape { chain, attach_index, pendant })
}

/// Hub of a star (a vertex adjacent to all others, all others leaves).
pub fn detect_star(g: &InteractionGraph) -> Option<Vertex> {
    let n = g.vertex_count();
    if n < 3 || g.edge_count() != n - 1 {
        return None;
    }
    (0..n).find(|&v| g.degree(v) == n - 1)
}

/// Hub and rim (in cyclic order) of a wheel.
pub fn detect_wheel(g: &InteractionGraph) -> Option<(Vertex, Vec<Vertex>)> {
    let n = g.vertex_count();
    if n < 5 || g.edge_count() != 2 * (n - 1) {
        return None;
    }
    let hub = (0..n).find(|&v| g.degree(v) == n - 1)?;
    if (0..n).any(|v| v != hub && g.degree(v) != 3) {
        return None;
    }
    let start = (0..n).find(|&v| v != hub)?;
    let mut rim = vec![start];
    let mut prev = hub;
    loop {
        let cur = *rim.last().unwrap();
        let next = g.neighbors(cur).iter().copied().find(|&w| w != hub && w != prev)?;
        if next == start {
            break;
        }
        prev = cur;
        rim.push(next);
    }
    (rim.len() == n - 1).then_some((hub, rim))
}

/// Depth of a complete binary tree in heap numbering, if `g` is one.
pub fn detect_complete_binary_tree(g: &InteractionGraph) -> Option<usize> {
    let n = g.vertex_count();
    let depth = (1..=16).find(|d| (1usize << (d + 1)) - 1 == n)?;
    let reference = build_family(GraphFamily::CompleteBinaryTree(depth)).ok()?;
    (reference.edges == g.edges).then_some(depth)
}
