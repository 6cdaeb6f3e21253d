//! Cayley graphs, their paths and finite subgraphs.
//!
//! Only positive edges `(g, y, g[y])` are stored; the negative edge
//! `(g[y], y^-1, g)` is the same edge traversed backwards.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::IndexSet;
use crate::group::{Element, FiniteGroup, GeneratorSet, Symbol, Word, IDENTITY};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("subgraph is not connected")]
    NotConnected,
    #[error("vertex {0} is not in the subgraph")]
    VertexAbsent(String),
}

/// A traversal of one edge: `src --label--> dst`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: Element,
    pub label: Symbol,
    pub dst: Element,
}

impl Edge {
    pub fn inverse(self) -> Edge {
        Edge { src: self.dst, label: self.label.flip(), dst: self.src }
    }

    /// The stored positive edge this traversal runs along.
    pub fn positive(self) -> (Element, usize) {
        if self.label.inverse {
            (self.dst, self.label.letter)
        } else {
            (self.src, self.label.letter)
        }
    }
}

/// A path; `base` is the start vertex, needed for empty paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub base: Element,
    pub edges: Vec<Edge>,
}

impl Path {
    pub fn empty(at: Element) -> Self {
        Self { base: at, edges: Vec::new() }
    }

    pub fn start(&self) -> Element {
        self.base
    }

    pub fn end(&self) -> Element {
        self.edges.last().map_or(self.base, |e| e.dst)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn label(&self) -> Word {
        Word(self.edges.iter().map(|e| e.label).collect())
    }

    pub fn inverse(&self) -> Path {
        Path { base: self.end(), edges: self.edges.iter().rev().map(|e| e.inverse()).collect() }
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn then(mut self, other: &Path) -> Path {
        debug_assert_eq!(self.end(), other.start());
        self.edges.extend_from_slice(&other.edges);
        self
    }

    pub fn is_well_formed(&self) -> bool {
        let mut at = self.base;
        for e in &self.edges {
            if e.src != at {
                return false;
            }
            at = e.dst;
        }
        true
    }
}

/// A finite subgraph, closed under `α`, `ω` and edge inversion.
///
/// Edge `(g, y)` is stored at bit `g * |letters| + y` of the owning
/// [`CayleyGraph`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgraph {
    pub(crate) vertices: IndexSet,
    pub(crate) edges: IndexSet,
}

impl Subgraph {
    pub fn has_vertex(&self, v: Element) -> bool {
        self.vertices.contains(v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Element> + '_ {
        self.vertices.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge_index(&self, index: usize) -> bool {
        self.edges.contains(index)
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter()
    }

    pub fn union(&self, other: &Subgraph) -> Subgraph {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &Subgraph) {
        self.vertices.union_with(&other.vertices);
        self.edges.union_with(&other.edges);
    }

    /// Vertexwise and edgewise inclusion.
    pub fn is_subgraph_of(&self, other: &Subgraph) -> bool {
        self.vertices.is_subset(&other.vertices) && self.edges.is_subset(&other.edges)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOrder {
    Forward,
    Reverse,
}

/// `Cay(G, A)` for a group and one of its generating sets.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    group: FiniteGroup,
    gens: GeneratorSet,
    targets: Vec<Element>,
    // letter indices sorted by name
    name_order: Vec<usize>,
}

impl CayleyGraph {
    pub fn new(group: FiniteGroup, gens: GeneratorSet) -> Self {
        let letters = gens.len();
        let mut targets = Vec::with_capacity(group.order() * letters);
        for g in group.elements() {
            for l in 0..letters {
                targets.push(group.mul(g, gens.image(l)));
            }
        }
        let mut name_order: Vec<usize> = (0..letters).collect();
        name_order.sort_by(|&a, &b| gens.letter(a).name.cmp(&gens.letter(b).name));
        Self { group, gens, targets, name_order }
    }

    /// `Cay(G, X)`.
    pub fn plain(group: &FiniteGroup) -> Self {
        Self::new(group.clone(), group.generators().clone())
    }

    /// `Cay(G, X ∪ Ḡ)`.
    pub fn extended(group: &FiniteGroup) -> Self {
        Self::new(group.clone(), group.extend_generators())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn vertex_count(&self) -> usize {
        self.group.order()
    }

    /// Number of positive edges of the whole Cayley graph.
    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn edge_index(&self, src: Element, letter: usize) -> usize {
        src * self.gens.len() + letter
    }

    /// The positive edge stored at `index`.
    pub fn edge_at(&self, index: usize) -> Edge {
        let letters = self.gens.len();
        Edge { src: index / letters, label: Symbol::pos(index % letters), dst: self.targets[index] }
    }

    /// The traversal leaving `src` along a signed letter.
    pub fn step(&self, src: Element, s: Symbol) -> Edge {
        if s.inverse {
            let src_of_positive = self.group.mul(src, self.group.inv(self.gens.image(s.letter)));
            Edge { src, label: s, dst: src_of_positive }
        } else {
            Edge { src, label: s, dst: self.targets[self.edge_index(src, s.letter)] }
        }
    }

    pub fn is_edge(&self, e: &Edge) -> bool {
        e.src < self.vertex_count() && e.label.letter < self.gens.len() && self.step(e.src, e.label).dst == e.dst
    }

    pub fn empty_subgraph(&self) -> Subgraph {
        Subgraph {
            vertices: IndexSet::with_capacity(self.vertex_count()),
            edges: IndexSet::with_capacity(self.edge_count()),
        }
    }

    /// `Γ_1`: the origin alone.
    pub fn origin(&self) -> Subgraph {
        let mut g = self.empty_subgraph();
        g.vertices.insert(IDENTITY);
        g
    }

    pub fn whole(&self) -> Subgraph {
        let mut g = self.empty_subgraph();
        for v in 0..self.vertex_count() {
            g.vertices.insert(v);
        }
        for i in 0..self.edge_count() {
            g.edges.insert(i);
        }
        g
    }

    pub fn add_vertex(&self, g: &mut Subgraph, v: Element) {
        g.vertices.insert(v);
    }

    /// Adds an edge (either direction) together with its endpoints.
    pub fn add_edge(&self, g: &mut Subgraph, e: Edge) {
        let (src, letter) = e.positive();
        let idx = self.edge_index(src, letter);
        g.edges.insert(idx);
        g.vertices.insert(src);
        g.vertices.insert(self.targets[idx]);
    }

    pub fn add_edge_index(&self, g: &mut Subgraph, index: usize) {
        g.edges.insert(index);
        g.vertices.insert(index / self.gens.len());
        g.vertices.insert(self.targets[index]);
    }

    /// `⟨P⟩`: the smallest subgraph containing the given vertices and edges.
    pub fn spanned(
        &self,
        vertices: impl IntoIterator<Item = Element>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Subgraph {
        let mut g = self.empty_subgraph();
        for v in vertices {
            g.vertices.insert(v);
        }
        for e in edges {
            self.add_edge(&mut g, e);
        }
        g
    }

    /// `⟨p⟩`; for an empty path this is its base vertex alone.
    pub fn span_of_path(&self, p: &Path) -> Subgraph {
        self.spanned([p.base], p.edges.iter().copied())
    }

    /// Follows a word from `start`.
    pub fn path_from_word(&self, start: Element, w: &Word) -> Path {
        let mut edges = Vec::with_capacity(w.len());
        let mut at = start;
        for &s in w.symbols() {
            let e = self.step(at, s);
            at = e.dst;
            edges.push(e);
        }
        Path { base: start, edges }
    }

    /// True iff the subgraph satisfies the closure invariants.
    pub fn is_subgraph(&self, g: &Subgraph) -> bool {
        g.edge_indices().all(|i| g.has_vertex(i / self.gens.len()) && g.has_vertex(self.targets[i]))
    }

    /// Positive edges of `g`, sorted by (source, letter name).
    pub fn positive_edges(&self, g: &Subgraph) -> Vec<Edge> {
        let mut out = Vec::with_capacity(g.edge_count());
        for v in g.vertices() {
            for &l in &self.name_order {
                let idx = self.edge_index(v, l);
                if g.has_edge_index(idx) {
                    out.push(self.edge_at(idx));
                }
            }
        }
        out
    }

    pub fn is_connected(&self, g: &Subgraph) -> bool {
        let Some(start) = g.vertices().next() else {
            return true;
        };
        let reached = self.reach(g, start);
        g.vertices().all(|v| reached[v])
    }

    fn reach(&self, g: &Subgraph, start: Element) -> Vec<bool> {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for idx in g.edge_indices() {
            let (a, b) = (idx / self.gens.len(), self.targets[idx]);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// `gΓ`.
    pub fn translate(&self, g: Element, graph: &Subgraph) -> Subgraph {
        let letters = self.gens.len();
        let mut out = self.empty_subgraph();
        for v in graph.vertices() {
            out.vertices.insert(self.group.mul(g, v));
        }
        for idx in graph.edge_indices() {
            let (src, l) = (idx / letters, idx % letters);
            out.edges.insert(self.group.mul(g, src) * letters + l);
        }
        out
    }

    /// Incident traversals leaving `v` within `g`, in the given edge order.
    fn incident(&self, g: &Subgraph, order: EdgeOrder) -> Vec<Vec<(usize, Edge)>> {
        let mut edges = self.positive_edges(g);
        if order == EdgeOrder::Reverse {
            edges.reverse();
        }
        let mut out = vec![Vec::new(); self.vertex_count()];
        for (k, e) in edges.into_iter().enumerate() {
            out[e.src].push((k, e));
            if e.dst != e.src {
                out[e.dst].push((k, e.inverse()));
            }
        }
        out
    }

    /// Shortest path inside `g`, ties broken by edge order.
    pub fn shortest_path(&self, g: &Subgraph, from: Element, to: Element) -> Option<Path> {
        if !g.has_vertex(from) || !g.has_vertex(to) {
            return None;
        }
        let incident = self.incident(g, EdgeOrder::Forward);
        let mut via: Vec<Option<Edge>> = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &(_, e) in &incident[v] {
                if !seen[e.dst] {
                    seen[e.dst] = true;
                    via[e.dst] = Some(e);
                    queue.push_back(e.dst);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut edges = Vec::new();
        let mut at = to;
        while at != from {
            let e = via[at].expect("reached vertices have a predecessor");
            edges.push(e);
            at = e.src;
        }
        edges.reverse();
        Some(Path { base: from, edges })
    }

    /// A path from the origin to `target` traversing every edge of `g`.
    pub fn spanning_path(&self, g: &Subgraph, target: Element) -> Result<Path, CayleyError> {
        self.spanning_path_ordered(g, target, EdgeOrder::Forward)
    }

    /// Depth-first double traversal: every edge is walked and immediately
    /// walked back (after exploring a new endpoint), so the tour returns to
    /// the origin; a shortest path to `target` is appended.
    pub fn spanning_path_ordered(&self, g: &Subgraph, target: Element, order: EdgeOrder) -> Result<Path, CayleyError> {
        for v in [IDENTITY, target] {
            if !g.has_vertex(v) {
                return Err(CayleyError::VertexAbsent(self.group.element_name(v).to_string()));
            }
        }
        if !self.is_connected(g) {
            return Err(CayleyError::NotConnected);
        }
        let incident = self.incident(g, order);
        let mut used = vec![false; g.edge_count()];
        let mut visited = vec![false; self.vertex_count()];
        let mut edges = Vec::with_capacity(2 * g.edge_count());

        // explicit stack of (vertex, next incident slot, edge that entered it)
        let mut stack: Vec<(Element, usize, Option<Edge>)> = vec![(IDENTITY, 0, None)];
        visited[IDENTITY] = true;
        while let Some(top) = stack.last_mut() {
            let (v, slot) = (top.0, top.1);
            if slot == incident[v].len() {
                let (_, _, entered) = stack.pop().expect("non-empty");
                if let Some(e) = entered {
                    edges.push(e.inverse());
                }
                continue;
            }
            top.1 += 1;
            let (k, e) = incident[v][slot];
            if used[k] {
                continue;
            }
            used[k] = true;
            edges.push(e);
            if visited[e.dst] {
                edges.push(e.inverse());
            } else {
                visited[e.dst] = true;
                stack.push((e.dst, 0, Some(e)));
            }
        }
        let tour = Path { base: IDENTITY, edges };
        let tail = self.shortest_path(g, IDENTITY, target).ok_or(CayleyError::NotConnected)?;
        Ok(tour.then(&tail))
    }

    /// Graphviz rendering: one node per vertex, one arrow per positive edge
    /// sorted by (source, letter name); barred letters are dashed.
    pub fn to_dot(&self, g: &Subgraph, title: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{title}\" {{");
        for v in g.vertices() {
            let name = self.group.element_name(v);
            if v == IDENTITY {
                let _ = writeln!(out, "  \"{name}\" [shape=doublecircle];");
            } else {
                let _ = writeln!(out, "  \"{name}\" [shape=circle];");
            }
        }
        for e in self.positive_edges(g) {
            let letter = &self.gens.letter(e.label.letter);
            let style = if self.gens.is_barred(e.label.letter) { ", style=dashed" } else { "" };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"{style}];",
                self.group.element_name(e.src),
                self.group.element_name(e.dst),
                letter.name
            );
        }
        out.push_str("}\n");
        out
    }
}
