//! The semilattices of subgraphs containing the origin and the expansions
//! built on them: `M(G,X)`, `F(G,X)`, `M(G,Y)` and the closed-graph monoid
//! `M^∧(G,Y)`.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cayley::{CayleyError, CayleyGraph, Path, Subgraph};
use crate::closure::wedge_close;
use crate::group::{Element, FiniteGroup, GeneratorKind, Symbol, Word, IDENTITY};

/// Default bound on the number of elements an enumeration may produce.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// Groups above this order are never enumerated graph by graph.
const MAX_ENUMERABLE_ORDER: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpansionError {
    #[error("enumeration would produce up to {predicted} elements (cap {cap})")]
    TooLarge { predicted: u128, cap: u128 },
    #[error("operation needs a {expected:?} family, got {found:?}")]
    WrongFlavor { expected: Flavor, found: Flavor },
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("not an element of this family: {0}")]
    InvalidElement(String),
    #[error("cannot parse element: {0}")]
    Parse(String),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

/// Which subgraphs containing the origin a family admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Finite connected subgraphs (`𝒳`).
    Connected,
    /// All finite subgraphs (`𝒳̃`).
    All,
    /// Connected subgraphs of `Cay(G, X ∪ Ḡ)` satisfying the closure condition.
    Closed,
}

/// A pair `(Γ, g)` with `g ∈ V(Γ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpansionElement {
    pub graph: Subgraph,
    pub point: Element,
}

impl ExpansionElement {
    pub fn new(graph: Subgraph, point: Element) -> Self {
        Self { graph, point }
    }
}

/// A subgraph family over a fixed Cayley graph, with the expansion operations.
#[derive(Clone, Debug)]
pub struct Family {
    flavor: Flavor,
    cayley: CayleyGraph,
}

impl Family {
    pub fn new(flavor: Flavor, cayley: CayleyGraph) -> Result<Self, ExpansionError> {
        if flavor == Flavor::Closed && cayley.gens().kind() != GeneratorKind::Extended {
            return Err(ExpansionError::InvalidElement("closed families need the extended generating set".into()));
        }
        Ok(Self { flavor, cayley })
    }

    /// `M(G, X)`.
    pub fn margolis_meakin(group: &FiniteGroup) -> Self {
        Self { flavor: Flavor::Connected, cayley: CayleyGraph::plain(group) }
    }

    /// `F(G, X)`.
    pub fn f_expansion(group: &FiniteGroup) -> Self {
        Self { flavor: Flavor::All, cayley: CayleyGraph::plain(group) }
    }

    /// `M(G, Y)` with `Y = X ∪ Ḡ`.
    pub fn margolis_meakin_extended(group: &FiniteGroup) -> Self {
        Self { flavor: Flavor::Connected, cayley: CayleyGraph::extended(group) }
    }

    /// `M^∧(G, Y)`.
    pub fn wedge(group: &FiniteGroup) -> Self {
        Self { flavor: Flavor::Closed, cayley: CayleyGraph::extended(group) }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn cayley(&self) -> &CayleyGraph {
        &self.cayley
    }

    pub fn group(&self) -> &FiniteGroup {
        self.cayley.group()
    }

    pub fn letter_count(&self) -> usize {
        self.cayley.gens().len()
    }

    /// Flavor predicate on graphs: origin present, plus connectivity or closure.
    pub fn admits_graph(&self, g: &Subgraph) -> bool {
        if !g.has_vertex(IDENTITY) || !self.cayley.is_subgraph(g) {
            return false;
        }
        match self.flavor {
            Flavor::All => true,
            Flavor::Connected => self.cayley.is_connected(g),
            Flavor::Closed => self.cayley.is_connected(g) && &wedge_close(&self.cayley, g) == g,
        }
    }

    pub fn contains(&self, s: &ExpansionElement) -> bool {
        s.graph.has_vertex(s.point) && self.admits_graph(&s.graph)
    }

    fn normalize(&self, g: Subgraph) -> Subgraph {
        match self.flavor {
            Flavor::Closed => wedge_close(&self.cayley, &g),
            _ => g,
        }
    }

    /// Top of the semilattice: `Γ_1`, or `Γ_1^∧ = Γ_{1̄}` for closed families.
    pub fn top_graph(&self) -> Subgraph {
        self.normalize(self.cayley.origin())
    }

    pub fn identity(&self) -> ExpansionElement {
        ExpansionElement::new(self.top_graph(), IDENTITY)
    }

    /// Semilattice meet: union, re-closed in closed families.
    pub fn meet(&self, a: &Subgraph, b: &Subgraph) -> Subgraph {
        self.normalize(a.union(b))
    }

    /// `(A,g)(B,h) = (A ∪ gB, gh)`, re-closed in closed families.
    pub fn mul(&self, a: &ExpansionElement, b: &ExpansionElement) -> ExpansionElement {
        let mut graph = self.cayley.translate(a.point, &b.graph);
        graph.union_with(&a.graph);
        ExpansionElement::new(self.normalize(graph), self.group().mul(a.point, b.point))
    }

    /// `(A,g)^{-1} = (g^{-1}A, g^{-1})`.
    pub fn inv(&self, a: &ExpansionElement) -> ExpansionElement {
        let gi = self.group().inv(a.point);
        ExpansionElement::new(self.cayley.translate(gi, &a.graph), gi)
    }

    pub fn is_idempotent(&self, a: &ExpansionElement) -> bool {
        a.point == IDENTITY
    }

    /// Image of a letter: the two-vertex graph with its single positive edge
    /// from the origin, closed in closed families.
    pub fn generator_image(&self, letter: &str) -> Result<ExpansionElement, ExpansionError> {
        let l = self.cayley.gens().index_of(letter).ok_or_else(|| ExpansionError::UnknownLetter(letter.to_string()))?;
        Ok(self.generator_image_at(l))
    }

    pub fn generator_image_at(&self, letter: usize) -> ExpansionElement {
        let e = self.cayley.step(IDENTITY, Symbol::pos(letter));
        let graph = self.cayley.spanned([IDENTITY], [e]);
        ExpansionElement::new(self.normalize(graph), e.dst)
    }

    pub fn symbol_image(&self, s: Symbol) -> ExpansionElement {
        let x = self.generator_image_at(s.letter);
        if s.inverse {
            self.inv(&x)
        } else {
            x
        }
    }

    /// `[w]` in this family.
    pub fn eval_word(&self, w: &Word) -> ExpansionElement {
        w.symbols().iter().fold(self.identity(), |acc, &s| self.mul(&acc, &self.symbol_image(s)))
    }

    /// `[l(p)] = (⟨p⟩, ω(p))` for a path from the origin.
    pub fn eval_path_element(&self, p: &Path) -> Result<ExpansionElement, ExpansionError> {
        if self.flavor != Flavor::Connected {
            return Err(ExpansionError::WrongFlavor { expected: Flavor::Connected, found: self.flavor });
        }
        if p.start() != IDENTITY || !p.is_well_formed() {
            return Err(ExpansionError::InvalidElement("path must start at the origin".into()));
        }
        Ok(ExpansionElement::new(self.cayley.span_of_path(p), p.end()))
    }

    /// `(A,g) ≤ (B,h)` iff `g = h` and `B ⊆ A`.
    pub fn natural_leq(&self, a: &ExpansionElement, b: &ExpansionElement) -> bool {
        a.point == b.point && b.graph.is_subgraph_of(&a.graph)
    }

    /// `σ` is equality of points.
    pub fn sigma_related(&self, a: &ExpansionElement, b: &ExpansionElement) -> bool {
        a.point == b.point
    }

    /// In `F(G,X)`, the maximum of the σ-class of `g` is `({1, g}, g)`.
    pub fn f_max_of_class(&self, g: Element) -> Result<ExpansionElement, ExpansionError> {
        if self.flavor != Flavor::All {
            return Err(ExpansionError::WrongFlavor { expected: Flavor::All, found: self.flavor });
        }
        Ok(ExpansionElement::new(self.cayley.spanned([IDENTITY, g], []), g))
    }

    /// Edge indices enumeration varies over for a vertex set: all edges inside
    /// it, or only `X`-edges for closed families (barred edges are forced).
    fn free_edges(&self, vertices: &[Element]) -> Vec<usize> {
        let inside: HashSet<Element> = vertices.iter().copied().collect();
        let gens = self.cayley.gens();
        let mut out = Vec::new();
        for &v in vertices {
            for l in 0..gens.len() {
                if self.flavor == Flavor::Closed && gens.is_barred(l) {
                    continue;
                }
                let idx = self.cayley.edge_index(v, l);
                if inside.contains(&self.cayley.edge_at(idx).dst) {
                    out.push(idx);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn vertex_sets(&self) -> Result<impl Iterator<Item = Vec<Element>>, ExpansionError> {
        let n = self.group().order();
        if n > MAX_ENUMERABLE_ORDER {
            return Err(ExpansionError::TooLarge {
                predicted: 1u128 << (n - 1),
                cap: 1u128 << (MAX_ENUMERABLE_ORDER - 1),
            });
        }
        Ok((0u64..(1u64 << (n - 1))).map(move |mask| {
            let mut vs = vec![IDENTITY];
            vs.extend((1..n).filter(|v| mask >> (v - 1) & 1 == 1));
            vs
        }))
    }

    /// Upper bound on the number of elements (exact unless connectivity prunes).
    pub fn predicted_count(&self) -> Result<u128, ExpansionError> {
        let mut total: u128 = 0;
        for vs in self.vertex_sets()? {
            let k = self.free_edges(&vs).len() as u32;
            let graphs = if k >= 120 { u128::MAX } else { 1u128 << k };
            total = total.saturating_add(graphs.saturating_mul(vs.len() as u128));
        }
        Ok(total)
    }

    /// Every member graph, ordered by vertex set then edge subset.
    pub fn enumerate_graphs(&self, cap: u128) -> Result<Vec<Subgraph>, ExpansionError> {
        let predicted = self.predicted_count()?;
        if predicted > cap {
            return Err(ExpansionError::TooLarge { predicted, cap });
        }
        let mut out = Vec::new();
        for vs in self.vertex_sets()? {
            let free = self.free_edges(&vs);
            let base = self.cayley.spanned(vs.iter().copied(), []);
            for mask in 0u64..(1u64 << free.len()) {
                let mut g = base.clone();
                for (bit, &idx) in free.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        g.edges.insert(idx);
                    }
                }
                let keep = match self.flavor {
                    Flavor::All => true,
                    Flavor::Connected => self.cayley.is_connected(&g),
                    Flavor::Closed => {
                        g = wedge_close(&self.cayley, &g);
                        true
                    }
                };
                if keep {
                    out.push(g);
                }
            }
        }
        Ok(out)
    }

    /// All `(Γ, g)` with `Γ` a member and `g ∈ V(Γ)`, in deterministic order.
    pub fn enumerate_elements(&self, cap: u128) -> Result<Vec<ExpansionElement>, ExpansionError> {
        Ok(self
            .enumerate_graphs(cap)?
            .into_iter()
            .flat_map(|g| {
                let points: Vec<Element> = g.vertices().collect();
                points.into_iter().map(move |p| ExpansionElement::new(g.clone(), p))
            })
            .collect())
    }

    /// Values of all words of length at most `max_len` over the generators
    /// and their inverses, in breadth-first discovery order.
    pub fn enumerate_by_words(&self, max_len: usize) -> Vec<ExpansionElement> {
        self.enumerate_by_words_limited(max_len, usize::MAX)
    }

    /// As [`Family::enumerate_by_words`], stopping once `limit` elements are found.
    pub fn enumerate_by_words_limited(&self, max_len: usize, limit: usize) -> Vec<ExpansionElement> {
        let steps: Vec<ExpansionElement> = (0..self.letter_count())
            .flat_map(|l| [Symbol::pos(l), Symbol::neg(l)])
            .map(|s| self.symbol_image(s))
            .collect();
        let mut seen = HashSet::new();
        let mut out = vec![self.identity()];
        seen.insert(self.identity());
        let mut frontier = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for s in &frontier {
                for t in &steps {
                    let u = self.mul(s, t);
                    if seen.insert(u.clone()) {
                        if out.len() == limit {
                            return out;
                        }
                        out.push(u.clone());
                        next.push(u);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }

    /// Text form `(V={e0,e1}; E={(e0,x)}; g=e1)`.
    pub fn format_element(&self, s: &ExpansionElement) -> String {
        let mut out = String::from("(");
        self.write_graph(&mut out, &s.graph);
        let _ = write!(out, "; g={})", self.group().element_name(s.point));
        out
    }

    /// Text form of a graph alone: `V={e0,e1}; E={(e0,x)}`.
    pub fn format_graph(&self, g: &Subgraph) -> String {
        let mut out = String::new();
        self.write_graph(&mut out, g);
        out
    }

    fn write_graph(&self, out: &mut String, g: &Subgraph) {
        let group = self.group();
        out.push_str("V={");
        for (i, v) in g.vertices().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(group.element_name(v));
        }
        out.push_str("}; E={");
        for (i, e) in self.cayley.positive_edges(g).into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "({},{})", group.element_name(e.src), self.cayley.gens().letter(e.label.letter).name);
        }
        out.push('}');
    }

    /// Parses the text form and checks membership.
    pub fn parse_element(&self, text: &str) -> Result<ExpansionElement, ExpansionError> {
        let err = |m: &str| ExpansionError::Parse(format!("{m} in {text:?}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let body =
            compact.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| err("missing parentheses"))?;
        let rest = body.strip_prefix("V={").ok_or_else(|| err("expected V={"))?;
        let (vpart, rest) = rest.split_once("};E={").ok_or_else(|| err("expected E={"))?;
        let (epart, gpart) = rest.split_once("};g=").ok_or_else(|| err("expected g="))?;

        let group = self.group();
        let elem = |name: &str| group.element_by_name(name).ok_or_else(|| err(&format!("unknown element {name:?}")));
        let mut graph = self.cayley.empty_subgraph();
        for v in vpart.split(',').filter(|s| !s.is_empty()) {
            self.cayley.add_vertex(&mut graph, elem(v)?);
        }
        let mut rest = epart;
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(|| err("expected ("))?;
            let (pair, tail) = inner.split_once(')').ok_or_else(|| err("expected )"))?;
            let (src, letter) = pair.split_once(',').ok_or_else(|| err("expected (src,letter)"))?;
            let l =
                self.cayley.gens().index_of(letter).ok_or_else(|| ExpansionError::UnknownLetter(letter.to_string()))?;
            let src = elem(src)?;
            let idx = self.cayley.edge_index(src, l);
            if !graph.has_vertex(src) || !graph.has_vertex(self.cayley.edge_at(idx).dst) {
                return Err(ExpansionError::InvalidElement(format!(
                    "edge ({},{letter}) has an endpoint outside V",
                    group.element_name(src)
                )));
            }
            graph.edges.insert(idx);
            rest = tail.strip_prefix(',').unwrap_or(tail);
        }
        let s = ExpansionElement::new(graph, elem(gpart)?);
        if !self.contains(&s) {
            return Err(ExpansionError::InvalidElement(text.to_string()));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteGroup {
        FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]], &[("x", 1)]).unwrap()
    }

    #[test]
    fn products_in_z2() {
        let m = Family::margolis_meakin(&z2());
        let x = m.generator_image("x").unwrap();
        assert_eq!(m.format_element(&x), "(V={e0,e1}; E={(e0,x)}; g=e1)");
        assert_eq!(m.mul(&m.identity(), &x), x);
        assert_eq!(m.format_element(&m.mul(&x, &x)), "(V={e0,e1}; E={(e0,x),(e1,x)}; g=e0)");
        assert_eq!(m.format_element(&m.inv(&x)), "(V={e0,e1}; E={(e1,x)}; g=e1)");
        assert_eq!(m.inv(&m.identity()), m.identity());

        let f = Family::f_expansion(&z2());
        let gap = f.f_max_of_class(1).unwrap();
        assert_eq!(f.format_element(&f.mul(&gap, &gap)), "(V={e0,e1}; E={}; g=e0)");
        assert_eq!(f.f_max_of_class(0).unwrap(), f.identity());
        assert!(matches!(m.f_max_of_class(1), Err(ExpansionError::WrongFlavor { .. })));
    }

    #[test]
    fn order_and_sigma() {
        let m = Family::margolis_meakin(&z2());
        let x = m.generator_image("x").unwrap();
        let xx = m.mul(&x, &x);
        assert!(m.natural_leq(&x, &x));
        assert!(m.natural_leq(&xx, &m.identity()));
        assert!(!m.natural_leq(&x, &m.identity()));
        assert!(m.sigma_related(&m.identity(), &xx));
        assert!(!m.sigma_related(&x, &m.identity()));
    }

    #[test]
    fn generator_images_in_extended_families() {
        let my = Family::margolis_meakin_extended(&z2());
        assert_eq!(my.format_element(&my.generator_image("@e0").unwrap()), "(V={e0}; E={(e0,@e0)}; g=e0)");
        assert_eq!(my.format_element(&my.generator_image("@e1").unwrap()), "(V={e0,e1}; E={(e0,@e1)}; g=e1)");
        assert!(matches!(my.generator_image("z"), Err(ExpansionError::UnknownLetter(_))));
    }

    #[test]
    fn counts_in_z2() {
        let g = z2();
        assert_eq!(Family::margolis_meakin(&g).enumerate_elements(DEFAULT_CAP).unwrap().len(), 7);
        assert_eq!(Family::f_expansion(&g).enumerate_elements(DEFAULT_CAP).unwrap().len(), 9);
        assert_eq!(Family::wedge(&g).enumerate_elements(DEFAULT_CAP).unwrap().len(), 9);
        let trivial = FiniteGroup::from_cayley_table(&[vec![0]], &[]).unwrap();
        assert_eq!(Family::margolis_meakin(&trivial).enumerate_elements(DEFAULT_CAP).unwrap().len(), 1);
        assert_eq!(Family::f_expansion(&trivial).enumerate_elements(DEFAULT_CAP).unwrap().len(), 1);
    }

    #[test]
    fn word_closure_reaches_everything() {
        let m = Family::margolis_meakin(&z2());
        assert_eq!(m.enumerate_by_words(0), vec![m.identity()]);
        assert_eq!(m.enumerate_by_words(4).len(), 7);
    }

    #[test]
    fn cap_is_enforced() {
        let m = Family::f_expansion(&z2());
        assert_eq!(m.enumerate_elements(5), Err(ExpansionError::TooLarge { predicted: 9, cap: 5 }));
    }

    #[test]
    fn text_form_round_trips() {
        let f = Family::f_expansion(&z2());
        for s in f.enumerate_elements(DEFAULT_CAP).unwrap() {
            assert_eq!(f.parse_element(&f.format_element(&s)).unwrap(), s);
        }
        let m = Family::margolis_meakin(&z2());
        assert!(matches!(m.parse_element("(V={e0,e1}; E={}; g=e1)"), Err(ExpansionError::InvalidElement(_))));
        assert!(matches!(m.parse_element("(V={e0}"), Err(ExpansionError::Parse(_))));
    }

    #[test]
    fn path_values() {
        let m = Family::margolis_meakin(&z2());
        let c = m.cayley();
        assert_eq!(m.eval_path_element(&Path::empty(0)).unwrap(), m.identity());
        let p = c.path_from_word(0, &Word(vec![Symbol::pos(0)]));
        assert_eq!(m.eval_path_element(&p).unwrap(), m.generator_image("x").unwrap());
    }
}
