//! Partial actions of groups on semilattices, premorphisms, the product
//! `Y ⋊ G`, and the structure of E-unitary inverse monoids.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

use crate::cayley::Subgraph;
use crate::expansion::{ExpansionError, Family};
use crate::group::{Element, FiniteGroup, IDENTITY};
use crate::monoid::{FiniteInverseMonoid, MonoidError};
use crate::report::{Report, Tally};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("φ_{g} is not defined at {at}")]
    UndefinedAction { g: String, at: String },
    #[error("malformed premorphism: {0}")]
    Malformed(String),
    #[error("malformed semilattice: {0}")]
    NotASemilattice(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}

/// A meet-semilattice, ordered by `a ≤ b` iff `a ∧ b = a`.
pub trait MeetSemilattice {
    type Elem: Clone + Eq + Hash + Ord + Debug;

    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        &self.meet(a, b) == a
    }

    fn describe(&self, a: &Self::Elem) -> String;
}

/// A partial action of a finite group on a semilattice.
pub trait PartialAction: MeetSemilattice {
    fn group(&self) -> &FiniteGroup;

    /// `g · x`, if defined.
    fn act(&self, g: Element, x: &Self::Elem) -> Option<Self::Elem>;
}

/// A semilattice given by its meet table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSemilattice {
    names: Vec<String>,
    meet: Vec<u32>,
}

impl FiniteSemilattice {
    /// Validates idempotence, commutativity and associativity.
    pub fn from_meet_table(names: Vec<String>, table: &[Vec<usize>]) -> Result<Self, ActionError> {
        let n = names.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(ActionError::NotASemilattice("table shape".into()));
        }
        let s = Self::from_fn(names, |a, b| table[a][b]);
        for a in 0..n {
            if s.meet_idx(a, a) != a {
                return Err(ActionError::NotASemilattice(format!("{} ∧ itself", s.names[a])));
            }
            for b in 0..n {
                if s.meet_idx(a, b) != s.meet_idx(b, a) {
                    return Err(ActionError::NotASemilattice(format!(
                        "{} ∧ {} not commutative",
                        s.names[a], s.names[b]
                    )));
                }
                for c in 0..n {
                    if s.meet_idx(s.meet_idx(a, b), c) != s.meet_idx(a, s.meet_idx(b, c)) {
                        return Err(ActionError::NotASemilattice("meet is not associative".into()));
                    }
                }
            }
        }
        Ok(s)
    }

    pub(crate) fn from_fn(names: Vec<String>, meet: impl Fn(usize, usize) -> usize) -> Self {
        let n = names.len();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(meet(a, b) as u32);
            }
        }
        Self { names, meet: table }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    #[inline]
    pub fn meet_idx(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    /// The top element, if there is one.
    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|a| self.meet_idx(a, t) == a))
    }
}

impl MeetSemilattice for FiniteSemilattice {
    type Elem = usize;

    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.meet_idx(*a, *b)
    }

    fn describe(&self, a: &usize) -> String {
        self.names[*a].clone()
    }
}

/// A premorphism `G → Σ(Y)` stored extensionally: one partial map per element.
#[derive(Clone, Debug)]
pub struct Premorphism {
    group: FiniteGroup,
    carrier: FiniteSemilattice,
    maps: Vec<Vec<Option<usize>>>,
}

impl Premorphism {
    pub fn new(
        group: FiniteGroup,
        carrier: FiniteSemilattice,
        maps: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, ActionError> {
        if maps.len() != group.order() {
            return Err(ActionError::Malformed("need one partial map per group element".into()));
        }
        let n = carrier.len();
        if maps.iter().any(|m| m.len() != n || m.iter().flatten().any(|&v| v >= n)) {
            return Err(ActionError::Malformed("partial map does not fit the carrier".into()));
        }
        Ok(Self { group, carrier, maps })
    }

    pub fn carrier(&self) -> &FiniteSemilattice {
        &self.carrier
    }

    pub fn map(&self, g: Element) -> &[Option<usize>] {
        &self.maps[g]
    }

    pub fn domain(&self, g: Element) -> Vec<usize> {
        (0..self.carrier.len()).filter(|&x| self.maps[g][x].is_some()).collect()
    }
}

impl MeetSemilattice for Premorphism {
    type Elem = usize;

    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.carrier.meet_idx(*a, *b)
    }

    fn describe(&self, a: &usize) -> String {
        self.carrier.name(*a).to_string()
    }
}

impl PartialAction for Premorphism {
    fn group(&self) -> &FiniteGroup {
        &self.group
    }

    fn act(&self, g: Element, x: &usize) -> Option<usize> {
        self.maps[g][*x]
    }
}

/// Checks PM1–PM3 and that every `φ_g` is an order isomorphism between
/// order ideals.
pub fn check_premorphism(phi: &Premorphism) -> Report {
    let group = &phi.group;
    let y = &phi.carrier;
    let n = y.len();
    let gname = |g: Element| group.element_name(g).to_string();
    let mut report = Report::new();

    let mut pm1 = Tally::new("PM1");
    for x in 0..n {
        pm1.record(phi.act(IDENTITY, &x) == Some(x), || format!("φ_1({}) ≠ {}", y.name(x), y.name(x)));
    }
    report.push(pm1);

    let mut pm2 = Tally::new("PM2");
    for g in group.elements() {
        for h in group.elements() {
            let gh = group.mul(g, h);
            for x in 0..n {
                if let Some(z) = phi.act(h, &x).and_then(|hx| phi.act(g, &hx)) {
                    pm2.record(phi.act(gh, &x) == Some(z), || {
                        format!(
                            "φ_{}φ_{}({}) = {} but φ_{}({}) differs",
                            gname(g),
                            gname(h),
                            y.name(x),
                            y.name(z),
                            gname(gh),
                            y.name(x)
                        )
                    });
                }
            }
        }
    }
    report.push(pm2);

    let mut pm3 = Tally::new("PM3");
    for g in group.elements() {
        let gi = group.inv(g);
        for x in 0..n {
            match phi.act(g, &x) {
                Some(gx) => pm3.record(phi.act(gi, &gx) == Some(x), || {
                    format!("φ_{}(φ_{}({})) ≠ {}", gname(gi), gname(g), y.name(x), y.name(x))
                }),
                None => {
                    // x ∉ dom φ_g, so x must not be in ran φ_{g^-1}
                    let hit = (0..n).find(|&w| phi.act(gi, &w) == Some(x));
                    pm3.record(hit.is_none(), || {
                        format!("{} ∈ ran φ_{} but ∉ dom φ_{}", y.name(x), gname(gi), gname(g))
                    })
                }
            }
        }
    }
    report.push(pm3);

    let mut ideal = Tally::new("order-ideal");
    let mut iso = Tally::new("order-isomorphism");
    for g in group.elements() {
        let dom = phi.domain(g);
        for &b in &dom {
            for a in 0..n {
                if y.leq(&a, &b) {
                    ideal.record(phi.act(g, &a).is_some(), || {
                        format!(
                            "{} ≤ {} ∈ dom φ_{} but {} ∉ dom φ_{}",
                            y.name(a),
                            y.name(b),
                            gname(g),
                            y.name(a),
                            gname(g)
                        )
                    });
                }
            }
        }
        for &a in &dom {
            for &b in &dom {
                let (fa, fb) = (phi.act(g, &a).unwrap(), phi.act(g, &b).unwrap());
                iso.record(y.leq(&a, &b) == y.leq(&fa, &fb), || {
                    format!("φ_{} does not preserve/reflect {} ≤ {}", gname(g), y.name(a), y.name(b))
                });
            }
        }
    }
    report.push(ideal);
    report.push(iso);
    report
}

/// An element `(e, g)` of `Y ⋊ G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductElement<E> {
    pub e: E,
    pub g: Element,
}

impl<E> ProductElement<E> {
    pub fn new(e: E, g: Element) -> Self {
        Self { e, g }
    }
}

/// `e ∈ ran φ_g`, i.e. `g^-1 · e` is defined.
pub fn in_product<A: PartialAction>(a: &A, s: &ProductElement<A::Elem>) -> bool {
    a.act(a.group().inv(s.g), &s.e).is_some()
}

fn undefined<A: PartialAction>(a: &A, g: Element, x: &A::Elem) -> ActionError {
    ActionError::UndefinedAction { g: a.group().element_name(g).to_string(), at: a.describe(x) }
}

/// `(e,g)(f,h) = (φ_g(φ_{g^-1}(e) ∧ f), gh)`.
pub fn product_mul<A: PartialAction>(
    a: &A,
    s: &ProductElement<A::Elem>,
    t: &ProductElement<A::Elem>,
) -> Result<ProductElement<A::Elem>, ActionError> {
    let group = a.group();
    let gi = group.inv(s.g);
    let pulled = a.act(gi, &s.e).ok_or_else(|| undefined(a, gi, &s.e))?;
    let m = a.meet(&pulled, &t.e);
    let e = a.act(s.g, &m).ok_or_else(|| undefined(a, s.g, &m))?;
    Ok(ProductElement::new(e, group.mul(s.g, t.g)))
}

/// `(e,g)^-1 = (φ_{g^-1}(e), g^-1)`.
pub fn product_inv<A: PartialAction>(
    a: &A,
    s: &ProductElement<A::Elem>,
) -> Result<ProductElement<A::Elem>, ActionError> {
    let gi = a.group().inv(s.g);
    let e = a.act(gi, &s.e).ok_or_else(|| undefined(a, gi, &s.e))?;
    Ok(ProductElement::new(e, gi))
}

/// All of `Y ⋊ G` over the given carrier elements.
pub fn product_elements<A: PartialAction>(a: &A, carrier: &[A::Elem]) -> Vec<ProductElement<A::Elem>> {
    let mut out = Vec::new();
    for e in carrier {
        for g in a.group().elements() {
            let s = ProductElement::new(e.clone(), g);
            if in_product(a, &s) {
                out.push(s);
            }
        }
    }
    out
}

/// The translation action of `G` on a subgraph family:
/// `g · Γ = gΓ`, defined when `g^-1 ∈ V(Γ)`.
#[derive(Clone, Copy, Debug)]
pub struct SubgraphAction<'a> {
    family: &'a Family,
}

impl<'a> SubgraphAction<'a> {
    pub fn new(family: &'a Family) -> Self {
        Self { family }
    }

    pub fn family(&self) -> &'a Family {
        self.family
    }
}

impl MeetSemilattice for SubgraphAction<'_> {
    type Elem = Subgraph;

    fn meet(&self, a: &Subgraph, b: &Subgraph) -> Subgraph {
        self.family.meet(a, b)
    }

    fn leq(&self, a: &Subgraph, b: &Subgraph) -> bool {
        b.is_subgraph_of(a)
    }

    fn describe(&self, a: &Subgraph) -> String {
        self.family.format_graph(a)
    }
}

impl PartialAction for SubgraphAction<'_> {
    fn group(&self) -> &FiniteGroup {
        self.family.group()
    }

    fn act(&self, g: Element, x: &Subgraph) -> Option<Subgraph> {
        x.has_vertex(self.family.group().inv(g)).then(|| self.family.cayley().translate(g, x))
    }
}

/// The underlying premorphism of an expansion: `φ_g(Γ) = gΓ` on graphs
/// containing `g^-1`. Returns the carrier listing alongside.
pub fn mm_premorphism(family: &Family, cap: u128) -> Result<(Premorphism, Vec<Subgraph>), ActionError> {
    let graphs = family.enumerate_graphs(cap)?;
    let n = graphs.len();
    let table_cells = (n as u128) * (n as u128);
    if table_cells > cap {
        return Err(ExpansionError::TooLarge { predicted: table_cells, cap }.into());
    }
    let index: HashMap<&Subgraph, usize> = graphs.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let action = SubgraphAction::new(family);
    let names = graphs.iter().map(|g| family.format_graph(g)).collect();
    let carrier = FiniteSemilattice::from_fn(names, |a, b| index[&action.meet(&graphs[a], &graphs[b])]);
    let maps = family
        .group()
        .elements()
        .map(|g| graphs.iter().map(|x| action.act(g, x).map(|y| index[&y])).collect())
        .collect();
    let phi = Premorphism::new(family.group().clone(), carrier, maps)?;
    Ok((phi, graphs))
}

/// The underlying premorphism of an E-unitary monoid on `E(S)`:
/// `φ_g(e) = s e s^-1` for any `s` in class `g` with `e ≤ s^-1 s`.
///
/// Carrier elements are positions in the idempotent list of the analysis;
/// the acting group is `S/σ`.
pub fn underlying_premorphism(s: &FiniteInverseMonoid) -> Result<Premorphism, ActionError> {
    let a = s.analyze();
    if !a.e_unitary {
        let witness = a.classes[0].iter().find(|&&x| !s.is_idempotent(x)).copied().unwrap_or(0);
        return Err(MonoidError::NotEUnitary(format!(
            "{} is σ-related to 1 but not idempotent",
            s.element_name(witness)
        ))
        .into());
    }
    let group = s.sigma_quotient(&a)?;
    let idem = &a.idempotents;
    let pos: HashMap<usize, usize> = idem.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let names = idem.iter().map(|&e| s.element_name(e).to_string()).collect();
    let carrier = FiniteSemilattice::from_fn(names, |x, y| pos[&s.mul(idem[x], idem[y])]);

    let mut maps = vec![vec![None; idem.len()]; a.class_count()];
    for (g, class) in a.classes.iter().enumerate() {
        for &t in class {
            let d = s.mul(s.inv(t), t);
            for (i, &e) in idem.iter().enumerate() {
                if !s.leq(e, d) {
                    continue;
                }
                let image = pos[&s.mul(s.mul(t, e), s.inv(t))];
                match maps[g][i] {
                    None => maps[g][i] = Some(image),
                    Some(prev) if prev == image => {}
                    Some(_) => {
                        return Err(ActionError::Malformed(format!(
                            "φ at {} depends on the class representative",
                            s.element_name(e)
                        )))
                    }
                }
            }
        }
    }
    Premorphism::new(group, carrier, maps)
}

/// `s ↦ (s s^-1, [s]_σ)` into `E(S) ⋊ S/σ`, with its verification report.
#[derive(Clone, Debug)]
pub struct StructureIso {
    pub premorphism: Premorphism,
    pub map: Vec<ProductElement<usize>>,
    pub report: Report,
}

pub fn structure_iso(s: &FiniteInverseMonoid) -> Result<StructureIso, ActionError> {
    let phi = underlying_premorphism(s)?;
    let a = s.analyze();
    let pos: HashMap<usize, usize> = a.idempotents.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let map: Vec<ProductElement<usize>> =
        (0..s.order()).map(|x| ProductElement::new(pos[&s.mul(x, s.inv(x))], a.class_of[x])).collect();
    let name = |x: usize| s.element_name(x).to_string();
    let mut report = Report::new();

    let mut member = Tally::new("image-in-product");
    for (x, p) in map.iter().enumerate() {
        member.record(in_product(&phi, p), || format!("image of {} is not in E(S) ⋊ S/σ", name(x)));
    }
    report.push(member);

    let targets = product_elements(&phi, &(0..phi.carrier().len()).collect::<Vec<_>>());
    let mut bij = Tally::new("bijective");
    let mut seen: HashMap<&ProductElement<usize>, usize> = HashMap::new();
    for (x, p) in map.iter().enumerate() {
        let prev = seen.insert(p, x);
        bij.record(prev.is_none(), || format!("{} and {} have the same image", name(prev.unwrap_or(0)), name(x)));
    }
    bij.record(targets.len() == map.len(), || format!("|S| = {} but |E(S) ⋊ S/σ| = {}", map.len(), targets.len()));
    report.push(bij);

    let mut mult = Tally::new("multiplicative");
    for x in 0..s.order() {
        for y in 0..s.order() {
            let got = product_mul(&phi, &map[x], &map[y]);
            mult.record(got.as_ref() == Ok(&map[s.mul(x, y)]), || {
                format!("image of {}·{} ≠ product of images", name(x), name(y))
            });
        }
    }
    report.push(mult);

    let mut inverse = Tally::new("inverse");
    for x in 0..s.order() {
        inverse.record(product_inv(&phi, &map[x]).as_ref() == Ok(&map[s.inv(x)]), || {
            format!("image of {}^-1 ≠ inverse of image", name(x))
        });
    }
    report.push(inverse);
    Ok(StructureIso { premorphism: phi, map, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::DEFAULT_CAP;

    fn z2() -> FiniteGroup {
        FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]], &[("x", 1)]).unwrap()
    }

    #[test]
    fn trivial_identity_premorphism_passes() {
        let g = FiniteGroup::from_cayley_table(&[vec![0]], &[]).unwrap();
        let y = FiniteSemilattice::from_meet_table(vec!["t".into()], &[vec![0]]).unwrap();
        let phi = Premorphism::new(g, y, vec![vec![Some(0)]]).unwrap();
        assert!(check_premorphism(&phi).passed());
    }

    #[test]
    fn non_ideal_domain_is_caught() {
        // chain top=0 > bottom=1; Z2 acts with dom φ_x = {top}, not downward closed
        let y =
            FiniteSemilattice::from_meet_table(vec!["top".into(), "bot".into()], &[vec![0, 1], vec![1, 1]]).unwrap();
        let phi = Premorphism::new(z2(), y, vec![vec![Some(0), Some(1)], vec![Some(0), None]]).unwrap();
        let r = check_premorphism(&phi);
        let f = r.get("order-ideal").unwrap();
        assert_eq!(f.status, crate::report::Status::Fail);
        assert!(f.witness.as_ref().unwrap().contains("bot ≤ top"));
    }

    #[test]
    fn mm_premorphism_domains() {
        let (phi, graphs) = mm_premorphism(&Family::margolis_meakin(&z2()), DEFAULT_CAP).unwrap();
        assert_eq!(graphs.len(), 4);
        assert_eq!(phi.domain(1).len(), 3);
        assert!(check_premorphism(&phi).passed());

        let (phi, graphs) = mm_premorphism(&Family::f_expansion(&z2()), DEFAULT_CAP).unwrap();
        assert_eq!(graphs.len(), 5);
        assert_eq!(phi.domain(1).len(), 4);
        assert!(check_premorphism(&phi).passed());

        let trivial = FiniteGroup::from_cayley_table(&[vec![0]], &[]).unwrap();
        let (phi, _) = mm_premorphism(&Family::margolis_meakin(&trivial), DEFAULT_CAP).unwrap();
        assert_eq!(phi.map(0), &[Some(0)]);
    }

    #[test]
    fn product_identity_and_inverse_laws() {
        let f = Family::margolis_meakin(&z2());
        let action = SubgraphAction::new(&f);
        let graphs = f.enumerate_graphs(DEFAULT_CAP).unwrap();
        let top = ProductElement::new(f.top_graph(), IDENTITY);
        for s in product_elements(&action, &graphs) {
            assert_eq!(product_mul(&action, &top, &s).unwrap(), s);
            let si = product_inv(&action, &s).unwrap();
            assert_eq!(product_mul(&action, &s, &si).unwrap(), ProductElement::new(s.e.clone(), IDENTITY));
        }
    }

    #[test]
    fn undefined_action_is_reported() {
        let f = Family::margolis_meakin(&z2());
        let action = SubgraphAction::new(&f);
        // (Γ_1, x) is not in the product: x ∉ V(Γ_1)
        let bad = ProductElement::new(f.top_graph(), 1);
        assert!(!in_product(&action, &bad));
        assert!(matches!(product_inv(&action, &bad), Err(ActionError::UndefinedAction { .. })));
    }

    #[test]
    fn group_structure_iso_is_trivial() {
        let s = FiniteInverseMonoid::from_group(&z2());
        let iso = structure_iso(&s).unwrap();
        assert!(iso.report.passed(), "{}", iso.report);
        assert_eq!(iso.premorphism.carrier().len(), 1);
    }
}
