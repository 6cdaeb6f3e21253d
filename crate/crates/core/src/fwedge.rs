//! The F-inverse monoid `M^∧(G, Y)` of closed graphs, its isomorphism with
//! `F(G, X)`, and terms over the signature `(·, ^-1, m, 1)`.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::expansion::{ExpansionElement, ExpansionError, Family, Flavor};
use crate::group::{Element, FiniteGroup, Word, IDENTITY};
use crate::monoid::{Analysis, FiniteInverseMonoid};

/// `M^∧(G, Y)` alongside `F(G, X)` for the same group.
#[derive(Clone, Debug)]
pub struct WedgeMonoid {
    closed: Family,
    f: Family,
}

impl WedgeMonoid {
    pub fn new(group: &FiniteGroup) -> Self {
        Self { closed: Family::wedge(group), f: Family::f_expansion(group) }
    }

    pub fn family(&self) -> &Family {
        &self.closed
    }

    pub fn f_family(&self) -> &Family {
        &self.f
    }

    pub fn group(&self) -> &FiniteGroup {
        self.closed.group()
    }

    pub fn identity(&self) -> ExpansionElement {
        self.closed.identity()
    }

    /// `((A ∪ gB)^∧, gh)`.
    pub fn mul(&self, a: &ExpansionElement, b: &ExpansionElement) -> ExpansionElement {
        self.closed.mul(a, b)
    }

    /// `(g^-1 A, g^-1)`; translation keeps graphs closed.
    pub fn inv(&self, a: &ExpansionElement) -> ExpansionElement {
        self.closed.inv(a)
    }

    /// `m(Γ, g) = (Γ_ḡ^∧, g)`.
    pub fn m(&self, a: &ExpansionElement) -> ExpansionElement {
        let l = self.closed.cayley().gens().barred_letter(a.point).expect("extended generating set");
        self.closed.generator_image_at(l)
    }

    /// Image of a letter of `X`.
    pub fn generator_image(&self, letter: &str) -> Result<ExpansionElement, ExpansionError> {
        let gens = self.closed.cayley().gens();
        match gens.index_of(letter) {
            Some(l) if !gens.is_barred(l) => Ok(self.closed.generator_image_at(l)),
            _ => Err(ExpansionError::UnknownLetter(letter.to_string())),
        }
    }

    pub fn contains(&self, a: &ExpansionElement) -> bool {
        self.closed.contains(a)
    }

    /// Erases the barred edges.
    pub fn f_map(&self, a: &ExpansionElement) -> ExpansionElement {
        let wide = self.closed.letter_count();
        let narrow = self.f.letter_count();
        let mut graph = self.f.cayley().empty_subgraph();
        for v in a.graph.vertices() {
            graph.vertices.insert(v);
        }
        for idx in a.graph.edge_indices() {
            let (src, l) = (idx / wide, idx % wide);
            if l < narrow {
                graph.edges.insert(src * narrow + l);
            }
        }
        ExpansionElement::new(graph, a.point)
    }

    /// Adds every barred edge between the vertices.
    pub fn f_inverse(&self, a: &ExpansionElement) -> ExpansionElement {
        let wide = self.closed.letter_count();
        let narrow = self.f.letter_count();
        let mut graph = self.closed.cayley().empty_subgraph();
        for v in a.graph.vertices() {
            graph.vertices.insert(v);
        }
        for idx in a.graph.edge_indices() {
            graph.edges.insert(idx / narrow * wide + idx % narrow);
        }
        ExpansionElement::new(crate::closure::wedge_close(self.closed.cayley(), &graph), a.point)
    }

    pub fn enumerate(&self, cap: u128) -> Result<Vec<ExpansionElement>, ExpansionError> {
        self.closed.enumerate_elements(cap)
    }

    /// The submonoid generated by the images of `X` in the enriched
    /// signature; `None` once more than `cap` elements are found.
    pub fn enriched_closure(&self, cap: usize) -> Option<Vec<ExpansionElement>> {
        let letters: Vec<String> = self.group().generators().letters().iter().map(|l| l.name.clone()).collect();
        enriched_closure(self, &letters, cap).expect("letters of X evaluate")
    }

    /// A term whose value is `a`: one idempotent `m(w_v) m(w_v)^-1` per
    /// vertex, one `m(w_s) x x^-1 m(w_s)^-1` per `X`-edge `(s, x)`, then
    /// `m(w_g)`, where `w_v` is a shortest word for `v`.
    pub fn decompose(&self, a: &ExpansionElement) -> EnrichedTerm {
        let group = self.group();
        let words = group.shortest_words();
        let gens = group.generators();
        let word_term = |w: &Word| {
            w.symbols().iter().fold(EnrichedTerm::One, |acc, s| {
                let mut t = EnrichedTerm::Letter(gens.letter(s.letter).name.clone());
                if s.inverse {
                    t = EnrichedTerm::Inverse(Box::new(t));
                }
                acc.then(t)
            })
        };
        let mv = |v: Element| EnrichedTerm::M(Box::new(word_term(&words[v])));
        let inverse = |t: EnrichedTerm| EnrichedTerm::Inverse(Box::new(t));

        let mut term = EnrichedTerm::One;
        for v in a.graph.vertices().filter(|&v| v != IDENTITY) {
            term = term.then(mv(v)).then(inverse(mv(v)));
        }
        let plain = self.f_map(a);
        for e in self.f.cayley().positive_edges(&plain.graph) {
            let x = EnrichedTerm::Letter(gens.letter(e.label.letter).name.clone());
            term = term.then(mv(e.src)).then(x.clone()).then(inverse(x)).then(inverse(mv(e.src)));
        }
        if a.point != IDENTITY {
            term = term.then(mv(a.point));
        }
        term
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("{0}")]
    Model(String),
}

/// A term over `(·, ^-1, m, 1)` with letters from `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EnrichedTerm {
    One,
    Letter(String),
    Concat(Box<EnrichedTerm>, Box<EnrichedTerm>),
    Inverse(Box<EnrichedTerm>),
    M(Box<EnrichedTerm>),
}

impl EnrichedTerm {
    /// `self · t`, dropping a leading `1`.
    pub fn then(self, t: EnrichedTerm) -> EnrichedTerm {
        match self {
            EnrichedTerm::One => t,
            s => EnrichedTerm::Concat(Box::new(s), Box::new(t)),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            EnrichedTerm::One | EnrichedTerm::Letter(_) => 1,
            EnrichedTerm::Concat(a, b) => 1 + a.size() + b.size(),
            EnrichedTerm::Inverse(a) | EnrichedTerm::M(a) => 1 + a.size(),
        }
    }

    /// Parses `term := factor+`, `factor := atom ("^-1")*`,
    /// `atom := "1" | letter | "m(" term ")" | "(" term ")"`.
    /// Only letters of `X` are accepted.
    pub fn parse(text: &str, gens: &crate::group::GeneratorSet) -> Result<EnrichedTerm, TermError> {
        let mut p = TermParser { text, pos: 0, gens };
        let t = p.term()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(p.error("unexpected input"));
        }
        Ok(t)
    }
}

impl fmt::Display for EnrichedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnrichedTerm::One => write!(f, "1"),
            EnrichedTerm::Letter(x) => write!(f, "{x}"),
            EnrichedTerm::Concat(a, b) => match **b {
                EnrichedTerm::Concat(..) => write!(f, "{a} ({b})"),
                _ => write!(f, "{a} {b}"),
            },
            EnrichedTerm::Inverse(a) => match **a {
                EnrichedTerm::Concat(..) => write!(f, "({a})^-1"),
                _ => write!(f, "{a}^-1"),
            },
            EnrichedTerm::M(a) => write!(f, "m({a})"),
        }
    }
}

struct TermParser<'a> {
    text: &'a str,
    pos: usize,
    gens: &'a crate::group::GeneratorSet,
}

fn is_ident_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '^' | '(' | ')')
}

impl TermParser<'_> {
    fn error(&self, msg: &str) -> TermError {
        TermError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), TermError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(d) => Err(self.error(&format!("expected {c:?}, found {d:?}"))),
            None => Err(self.error(&format!("expected {c:?} at end of input"))),
        }
    }

    fn term(&mut self) -> Result<EnrichedTerm, TermError> {
        let mut t = self.factor()?;
        while matches!(self.peek(), Some(c) if c != ')') {
            t = EnrichedTerm::Concat(Box::new(t), Box::new(self.factor()?));
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<EnrichedTerm, TermError> {
        let mut t = self.atom()?;
        while self.peek() == Some('^') {
            if !self.rest().starts_with("^-1") {
                return Err(self.error("expected ^-1"));
            }
            self.pos += 3;
            t = EnrichedTerm::Inverse(Box::new(t));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<EnrichedTerm, TermError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(')')?;
                Ok(t)
            }
            Some(c) if is_ident_char(c) => {
                let start = self.pos;
                let len = self.rest().find(|c: char| !is_ident_char(c)).unwrap_or(self.rest().len());
                let name = &self.text[start..start + len];
                self.pos += len;
                if name == "m" && self.peek() == Some('(') {
                    self.pos += 1;
                    let t = self.term()?;
                    self.expect(')')?;
                    return Ok(EnrichedTerm::M(Box::new(t)));
                }
                if name == "1" {
                    return Ok(EnrichedTerm::One);
                }
                match self.gens.index_of(name) {
                    Some(l) if !self.gens.is_barred(l) => Ok(EnrichedTerm::Letter(name.to_string())),
                    _ => Err(TermError::UnknownLetter(name.to_string())),
                }
            }
            Some(c) => Err(self.error(&format!("unexpected {c:?}"))),
        }
    }
}

/// Every term with at most `max_size` nodes, by increasing size.
pub fn enumerate_terms(letters: &[String], max_size: usize) -> Vec<EnrichedTerm> {
    let mut by_size: Vec<Vec<EnrichedTerm>> = vec![Vec::new()];
    for size in 1..=max_size {
        let mut level = Vec::new();
        if size == 1 {
            level.push(EnrichedTerm::One);
            level.extend(letters.iter().map(|x| EnrichedTerm::Letter(x.clone())));
        } else {
            for t in &by_size[size - 1] {
                level.push(EnrichedTerm::Inverse(Box::new(t.clone())));
                level.push(EnrichedTerm::M(Box::new(t.clone())));
            }
            for left in 1..size - 1 {
                for a in &by_size[left] {
                    for b in &by_size[size - 1 - left] {
                        level.push(EnrichedTerm::Concat(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
            }
        }
        by_size.push(level);
    }
    by_size.into_iter().flatten().collect()
}

/// The submonoid generated by the named letters, saturated under `·`, `^-1`
/// and `m`, sorted; `None` once more than `cap` elements are found.
pub fn enriched_closure<M>(model: &M, letters: &[String], cap: usize) -> Result<Option<Vec<M::Elem>>, TermError>
where
    M: EnrichedModel,
    M::Elem: Hash + Eq + Ord,
{
    let mut out = vec![model.one()];
    let mut seen = HashSet::from([model.one()]);
    let mut pending = letters.iter().map(|x| model.letter(x)).collect::<Result<Vec<_>, _>>()?;
    while let Some(u) = pending.pop() {
        if !seen.insert(u.clone()) {
            continue;
        }
        if out.len() == cap {
            return Ok(None);
        }
        out.push(u.clone());
        pending.push(model.inv(&u));
        pending.push(model.m(&u)?);
        for v in &out {
            pending.push(model.mul(&u, v));
            pending.push(model.mul(v, &u));
        }
    }
    out.sort();
    Ok(Some(out))
}

/// A structure interpreting the enriched signature.
pub trait EnrichedModel {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn one(&self) -> Self::Elem;

    fn letter(&self, name: &str) -> Result<Self::Elem, TermError>;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn m(&self, a: &Self::Elem) -> Result<Self::Elem, TermError>;
}

pub fn eval_term<M: EnrichedModel>(model: &M, t: &EnrichedTerm) -> Result<M::Elem, TermError> {
    Ok(match t {
        EnrichedTerm::One => model.one(),
        EnrichedTerm::Letter(x) => model.letter(x)?,
        EnrichedTerm::Concat(a, b) => model.mul(&eval_term(model, a)?, &eval_term(model, b)?),
        EnrichedTerm::Inverse(a) => model.inv(&eval_term(model, a)?),
        EnrichedTerm::M(a) => model.m(&eval_term(model, a)?)?,
    })
}

impl EnrichedModel for WedgeMonoid {
    type Elem = ExpansionElement;

    fn one(&self) -> ExpansionElement {
        self.identity()
    }

    fn letter(&self, name: &str) -> Result<ExpansionElement, TermError> {
        self.generator_image(name).map_err(|_| TermError::UnknownLetter(name.to_string()))
    }

    fn mul(&self, a: &ExpansionElement, b: &ExpansionElement) -> ExpansionElement {
        WedgeMonoid::mul(self, a, b)
    }

    fn inv(&self, a: &ExpansionElement) -> ExpansionElement {
        WedgeMonoid::inv(self, a)
    }

    fn m(&self, a: &ExpansionElement) -> Result<ExpansionElement, TermError> {
        Ok(WedgeMonoid::m(self, a))
    }
}

/// `M(G, X)` and `F(G, X)`; only the latter interprets `m`.
impl EnrichedModel for Family {
    type Elem = ExpansionElement;

    fn one(&self) -> ExpansionElement {
        self.identity()
    }

    fn letter(&self, name: &str) -> Result<ExpansionElement, TermError> {
        let gens = self.cayley().gens();
        match gens.index_of(name) {
            Some(l) if !gens.is_barred(l) => Ok(self.generator_image_at(l)),
            _ => Err(TermError::UnknownLetter(name.to_string())),
        }
    }

    fn mul(&self, a: &ExpansionElement, b: &ExpansionElement) -> ExpansionElement {
        Family::mul(self, a, b)
    }

    fn inv(&self, a: &ExpansionElement) -> ExpansionElement {
        Family::inv(self, a)
    }

    fn m(&self, a: &ExpansionElement) -> Result<ExpansionElement, TermError> {
        match self.flavor() {
            Flavor::All => Ok(self.f_max_of_class(a.point).expect("F flavor")),
            Flavor::Closed => {
                let l = self.cayley().gens().barred_letter(a.point).expect("extended generating set");
                Ok(self.generator_image_at(l))
            }
            Flavor::Connected => Err(TermError::Model("m is undefined: the monoid is not F-inverse".into())),
        }
    }
}

/// A group, with `m` the identity map.
impl EnrichedModel for FiniteGroup {
    type Elem = Element;

    fn one(&self) -> Element {
        IDENTITY
    }

    fn letter(&self, name: &str) -> Result<Element, TermError> {
        let gens = self.generators();
        gens.index_of(name).map(|l| gens.image(l)).ok_or_else(|| TermError::UnknownLetter(name.to_string()))
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        FiniteGroup::mul(self, *a, *b)
    }

    fn inv(&self, a: &Element) -> Element {
        FiniteGroup::inv(self, *a)
    }

    fn m(&self, a: &Element) -> Result<Element, TermError> {
        Ok(*a)
    }
}

/// A finite F-inverse monoid with its analysis; `m` is the σ-class maximum.
#[derive(Clone, Debug)]
pub struct FInverseTable<'a> {
    pub monoid: &'a FiniteInverseMonoid,
    pub analysis: &'a Analysis,
}

impl EnrichedModel for FInverseTable<'_> {
    type Elem = usize;

    fn one(&self) -> usize {
        self.monoid.identity()
    }

    fn letter(&self, name: &str) -> Result<usize, TermError> {
        self.monoid.generator(name).ok_or_else(|| TermError::UnknownLetter(name.to_string()))
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.monoid.mul(*a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        self.monoid.inv(*a)
    }

    fn m(&self, a: &usize) -> Result<usize, TermError> {
        self.analysis.m(*a).ok_or_else(|| TermError::Model("m is undefined: the monoid is not F-inverse".into()))
    }
}

/// The set `{m(s)}` is exactly the set of σ-class maxima of `M^∧`; used by
/// tests as the order-scan oracle for `m`.
pub fn sigma_max_by_scan(w: &WedgeMonoid, elems: &[ExpansionElement], point: Element) -> Option<ExpansionElement> {
    let class: Vec<&ExpansionElement> = elems.iter().filter(|s| s.point == point).collect();
    class.iter().find(|t| class.iter().all(|s| w.family().natural_leq(s, t))).map(|t| (*t).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::DEFAULT_CAP;

    fn z2() -> FiniteGroup {
        FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]], &[("x", 1)]).unwrap()
    }

    fn parse(text: &str, g: &FiniteGroup) -> Result<EnrichedTerm, TermError> {
        EnrichedTerm::parse(text, g.generators())
    }

    #[test]
    fn parsing() {
        let g = FiniteGroup::from_permutations(&[("x", vec![1, 0, 2]), ("y", vec![0, 2, 1])]).unwrap();
        assert_eq!(parse("1", &g).unwrap(), EnrichedTerm::One);
        let letter = |s: &str| Box::new(EnrichedTerm::Letter(s.into()));
        assert_eq!(
            parse("m(x y^-1) x", &g).unwrap(),
            EnrichedTerm::Concat(
                Box::new(EnrichedTerm::M(Box::new(EnrichedTerm::Concat(
                    letter("x"),
                    Box::new(EnrichedTerm::Inverse(letter("y")))
                )))),
                letter("x")
            )
        );
        assert_eq!(parse("m(", &g), Err(TermError::Syntax { pos: 2, msg: "unexpected end of input".into() }));
        assert_eq!(parse("z", &g), Err(TermError::UnknownLetter("z".into())));
        assert_eq!(parse("@e0", &g), Err(TermError::UnknownLetter("@e0".into())));
        assert!(matches!(parse("x^2", &g), Err(TermError::Syntax { .. })));
        assert!(matches!(parse("x )", &g), Err(TermError::Syntax { .. })));
        assert!(matches!(parse("", &g), Err(TermError::Syntax { .. })));
        assert_eq!(parse("(x)(y)", &g).unwrap().size(), 3);
    }

    #[test]
    fn display_round_trips() {
        let g = z2();
        for text in ["1", "m(x) x^-1 x", "x (x x)", "(x x)^-1", "m(m(x)^-1)^-1^-1"] {
            let t = parse(text, &g).unwrap();
            assert_eq!(parse(&t.to_string(), &g).unwrap(), t, "{text}");
        }
    }

    #[test]
    fn wedge_operations_in_z2() {
        let w = WedgeMonoid::new(&z2());
        let f = w.family();
        let x = w.generator_image("x").unwrap();
        assert_eq!(w.mul(&w.identity(), &x), x);
        assert_eq!(
            f.format_element(&w.mul(&x, &x)),
            "(V={e0,e1}; E={(e0,@e0),(e0,@e1),(e0,x),(e1,@e0),(e1,@e1),(e1,x)}; g=e0)"
        );
        let xi = w.inv(&x);
        assert_eq!(xi.point, 1);
        assert_eq!(xi.graph, f.cayley().translate(1, &x.graph));
        assert!(w.contains(&xi));
        assert_eq!(w.m(&w.identity()), w.identity());
        assert_eq!(f.format_element(&w.m(&x)), "(V={e0,e1}; E={(e0,@e0),(e0,@e1),(e1,@e0),(e1,@e1)}; g=e1)");
        assert_eq!(w.f_family().format_element(&w.f_map(&w.m(&x))), "(V={e0,e1}; E={}; g=e1)");
        assert_eq!(w.f_map(&w.identity()), w.f_family().identity());
    }

    #[test]
    fn f_map_is_a_bijection_in_z2() {
        let w = WedgeMonoid::new(&z2());
        let closed = w.enumerate(DEFAULT_CAP).unwrap();
        let f = w.f_family().enumerate_elements(DEFAULT_CAP).unwrap();
        assert_eq!(closed.len(), 9);
        let images: HashSet<ExpansionElement> = closed.iter().map(|s| w.f_map(s)).collect();
        assert_eq!(images, f.iter().cloned().collect());
        for s in &closed {
            assert_eq!(w.f_inverse(&w.f_map(s)), *s);
        }
    }

    #[test]
    fn terms_evaluate_in_both_models() {
        let g = z2();
        let w = WedgeMonoid::new(&g);
        let f = w.f_family();
        let t = parse("m(x)", &g).unwrap();
        assert_eq!(f.format_element(&eval_term(f, &t).unwrap()), "(V={e0,e1}; E={}; g=e1)");
        let t = parse("m(x) x^-1 x", &g).unwrap();
        let in_f = eval_term(f, &t).unwrap();
        assert_eq!(f.format_element(&in_f), "(V={e0,e1}; E={(e0,x)}; g=e1)");
        assert_eq!(w.f_map(&eval_term(&w, &t).unwrap()), in_f);
        assert_eq!(eval_term(&g, &t).unwrap(), 1);
        let m = Family::margolis_meakin(&g);
        assert!(matches!(eval_term(&m, &t), Err(TermError::Model(_))));
    }

    #[test]
    fn decomposition_reproduces_every_element() {
        let w = WedgeMonoid::new(&z2());
        for s in w.enumerate(DEFAULT_CAP).unwrap() {
            let t = w.decompose(&s);
            assert_eq!(eval_term(&w, &t).unwrap(), s, "{t}");
        }
        assert_eq!(w.decompose(&w.identity()), EnrichedTerm::One);
    }

    #[test]
    fn m_is_the_class_maximum() {
        let w = WedgeMonoid::new(&z2());
        let all = w.enumerate(DEFAULT_CAP).unwrap();
        for s in &all {
            assert_eq!(sigma_max_by_scan(&w, &all, s.point), Some(w.m(s)));
        }
    }

    #[test]
    fn term_counts() {
        let sizes: Vec<usize> = (1..=5).map(|n| enumerate_terms(&["x".into()], n).len()).collect();
        assert_eq!(sizes, vec![2, 6, 18, 58, 202]);
    }

    #[test]
    fn enriched_closure_reaches_everything() {
        let g = z2();
        let f = Family::f_expansion(&g);
        assert_eq!(enriched_closure(&f, &["x".into()], 100).unwrap().unwrap().len(), 9);
        let w = WedgeMonoid::new(&g);
        assert_eq!(w.enriched_closure(100).unwrap().len(), 9);
        assert_eq!(w.enriched_closure(5), None);
    }
}
