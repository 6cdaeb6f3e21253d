//! Dual-closure operators on semilattices, the congruences they induce, and
//! quotient products; plus the closure `Γ ↦ Γ^∧` on subgraphs of `Cay(G, Y)`.

use std::collections::HashMap;

use thiserror::Error;

use crate::cayley::{CayleyGraph, Subgraph};
use crate::expansion::Family;
use crate::group::{Element, FiniteGroup, GeneratorKind};
use crate::partial_action::{
    in_product, product_inv, product_mul, MeetSemilattice, PartialAction, ProductElement, SubgraphAction,
};
use crate::report::{Report, Tally};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error("not a dual-closure operator: {0}")]
    NotDualClosure(String),
    #[error("closure is not G-invariant: {0}")]
    NotInvariant(String),
    #[error("closure needs the extended generating set")]
    NotExtended,
}

/// `Γ^∧`: adds `(a, @name(a^-1 b))` for every ordered pair of vertices,
/// including `a = b`.
pub fn wedge_close(cayley: &CayleyGraph, g: &Subgraph) -> Subgraph {
    let group = cayley.group();
    let gens = cayley.gens();
    let mut out = g.clone();
    let vertices: Vec<Element> = g.vertices().collect();
    for &a in &vertices {
        let ai = group.inv(a);
        for &b in &vertices {
            let l = gens.barred_letter(group.mul(ai, b)).expect("wedge closure needs barred letters");
            out.edges.insert(cayley.edge_index(a, l));
        }
    }
    out
}

/// Condition (C).
pub fn is_closed(cayley: &CayleyGraph, g: &Subgraph) -> bool {
    &wedge_close(cayley, g) == g
}

type Elem<J> = <<J as DualClosure>::Carrier as MeetSemilattice>::Elem;
type ProductPair<J> = (ProductElement<Elem<J>>, ProductElement<Elem<J>>);

/// A map `j` on a semilattice, expected to satisfy Cl1–Cl3.
pub trait DualClosure {
    type Carrier: MeetSemilattice;

    fn carrier(&self) -> &Self::Carrier;

    fn apply(&self, x: &Elem<Self>) -> Elem<Self>;
}

/// A closure given by its value table on a carrier indexed by `usize`.
#[derive(Clone, Debug)]
pub struct TableClosure<C> {
    carrier: C,
    map: Vec<usize>,
}

impl<C: MeetSemilattice<Elem = usize>> TableClosure<C> {
    pub fn new(carrier: C, map: Vec<usize>) -> Self {
        Self { carrier, map }
    }

    pub fn identity(carrier: C, n: usize) -> Self {
        Self { carrier, map: (0..n).collect() }
    }
}

impl<C: MeetSemilattice<Elem = usize>> DualClosure for TableClosure<C> {
    type Carrier = C;

    fn carrier(&self) -> &C {
        &self.carrier
    }

    fn apply(&self, x: &usize) -> usize {
        self.map[*x]
    }
}

/// `Γ ↦ Γ^∧` on the connected subgraphs of `Cay(G, Y)`.
#[derive(Clone, Copy, Debug)]
pub struct WedgeClosure<'a> {
    action: SubgraphAction<'a>,
}

impl<'a> WedgeClosure<'a> {
    /// `family` must be `M(G, Y)`.
    pub fn new(family: &'a Family) -> Result<Self, ClosureError> {
        if family.cayley().gens().kind() != GeneratorKind::Extended {
            return Err(ClosureError::NotExtended);
        }
        Ok(Self { action: SubgraphAction::new(family) })
    }
}

impl<'a> DualClosure for WedgeClosure<'a> {
    type Carrier = SubgraphAction<'a>;

    fn carrier(&self) -> &SubgraphAction<'a> {
        &self.action
    }

    fn apply(&self, x: &Subgraph) -> Subgraph {
        wedge_close(self.action.family().cayley(), x)
    }
}

/// Cl1 and Cl3 on `xs`; Cl2 on `x ∧ y ≤ x` and on each comparable pair.
pub fn verify_dual_closure<J: DualClosure>(j: &J, xs: &[Elem<J>], pairs: &[(Elem<J>, Elem<J>)]) -> Report {
    let s = j.carrier();
    let mut cl1 = Tally::new("Cl1");
    let mut cl3 = Tally::new("Cl3");
    for x in xs {
        let jx = j.apply(x);
        cl1.record(s.leq(&jx, x), || format!("j({}) = {} is not ≤ it", s.describe(x), s.describe(&jx)));
        cl3.record(j.apply(&jx) == jx, || format!("j(j({})) ≠ j({})", s.describe(x), s.describe(x)));
    }
    let mut cl2 = Tally::new("Cl2");
    let mut mono = |a: &Elem<J>, b: &Elem<J>| {
        cl2.record(s.leq(&j.apply(a), &j.apply(b)), || {
            format!("{} ≤ {} but j({}) ≰ j({})", s.describe(a), s.describe(b), s.describe(a), s.describe(b))
        });
    };
    for (x, y) in pairs {
        let m = s.meet(x, y);
        mono(&m, x);
        mono(&m, y);
        if s.leq(x, y) {
            mono(x, y);
        }
    }
    let mut r = Report::new();
    r.push(cl1);
    r.push(cl2);
    r.push(cl3);
    r
}

/// `j(j(x) ∧ j(y)) = j(x ∧ y)`.
pub fn lemma31_check<J: DualClosure>(j: &J, pairs: &[(Elem<J>, Elem<J>)]) -> Report {
    let s = j.carrier();
    let mut t = Tally::new("meet-of-closures");
    for (x, y) in pairs {
        let lhs = j.apply(&s.meet(&j.apply(x), &j.apply(y)));
        let rhs = j.apply(&s.meet(x, y));
        t.record(lhs == rhs, || format!("x = {}, y = {}", s.describe(x), s.describe(y)));
    }
    let mut r = Report::new();
    r.push(t);
    r
}

/// Fibers of `j`, in order of first appearance.
pub fn rho_j_classes<J: DualClosure>(j: &J, xs: &[Elem<J>]) -> Vec<Vec<Elem<J>>> {
    let mut index: HashMap<Elem<J>, usize> = HashMap::new();
    let mut classes: Vec<Vec<Elem<J>>> = Vec::new();
    for x in xs {
        let next = classes.len();
        let c = *index.entry(j.apply(x)).or_insert(next);
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(x.clone());
    }
    classes
}

/// `x ρ_j y ⇒ (x ∧ z) ρ_j (y ∧ z)`, checked by comparing each `x` with the
/// first member of its class against every `z`.
pub fn rho_j_congruence_check<J: DualClosure>(j: &J, xs: &[Elem<J>], zs: &[Elem<J>]) -> Report {
    let s = j.carrier();
    let mut first: HashMap<Elem<J>, Elem<J>> = HashMap::new();
    let mut t = Tally::new("rho-congruence");
    for x in xs {
        let rep = first.entry(j.apply(x)).or_insert_with(|| x.clone()).clone();
        if &rep == x {
            continue;
        }
        for z in zs {
            t.record(j.apply(&s.meet(x, z)) == j.apply(&s.meet(&rep, z)), || {
                format!("{} ρ {} but not after meeting with {}", s.describe(x), s.describe(&rep), s.describe(z))
            });
        }
    }
    let mut r = Report::new();
    r.push(t);
    r
}

/// The congruence condition on explicit triples `(x, y, z)`.
pub fn rho_j_congruence_triples<J: DualClosure>(j: &J, triples: &[(Elem<J>, Elem<J>, Elem<J>)]) -> Report {
    let s = j.carrier();
    let mut t = Tally::new("rho-congruence");
    for (x, y, z) in triples {
        if j.apply(x) != j.apply(y) {
            continue;
        }
        t.record(j.apply(&s.meet(x, z)) == j.apply(&s.meet(y, z)), || {
            format!("{} ρ {} but not after meeting with {}", s.describe(x), s.describe(y), s.describe(z))
        });
    }
    let mut r = Report::new();
    r.push(t);
    r
}

/// `g · x` defined ⇒ `g · j(x)` defined and `j(g · x) = g · j(x)`.
pub fn is_g_invariant<J>(j: &J, xs: &[Elem<J>]) -> Report
where
    J: DualClosure,
    J::Carrier: PartialAction,
{
    let s = j.carrier();
    let group = s.group();
    let mut dom = Tally::new("closure-stays-in-domain");
    let mut commute = Tally::new("G-invariance");
    for g in group.elements() {
        for x in xs {
            let Some(gx) = s.act(g, x) else { continue };
            let jx = j.apply(x);
            match s.act(g, &jx) {
                None => dom.record(false, || {
                    format!("{} ∈ dom φ_{} but j of it is not", s.describe(x), group.element_name(g))
                }),
                Some(gjx) => {
                    dom.record(true, String::new);
                    commute.record(j.apply(&gx) == gjx, || {
                        format!(
                            "j({}·{}) ≠ {}·j({})",
                            group.element_name(g),
                            s.describe(x),
                            group.element_name(g),
                            s.describe(x)
                        )
                    });
                }
            }
        }
    }
    let mut r = Report::new();
    r.push(dom);
    r.push(commute);
    r
}

/// `(j(X), ∧̄)` with the partial action restricted from `X`.
#[derive(Clone, Copy, Debug)]
pub struct QuotientAction<'a, J> {
    j: &'a J,
}

impl<J> MeetSemilattice for QuotientAction<'_, J>
where
    J: DualClosure,
{
    type Elem = Elem<J>;

    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.j.apply(&self.j.carrier().meet(a, b))
    }

    fn describe(&self, a: &Self::Elem) -> String {
        self.j.carrier().describe(a)
    }
}

impl<J> PartialAction for QuotientAction<'_, J>
where
    J: DualClosure,
    J::Carrier: PartialAction,
{
    fn group(&self) -> &FiniteGroup {
        self.j.carrier().group()
    }

    fn act(&self, g: Element, x: &Self::Elem) -> Option<Self::Elem> {
        self.j.carrier().act(g, x)
    }
}

/// `π: X ⋊ G → j(X) ⋊ G`, `π(e, g) = (j(e), g)`.
#[derive(Clone, Copy, Debug)]
pub struct QuotientProduct<'a, J> {
    j: &'a J,
    quotient: QuotientAction<'a, J>,
}

impl<'a, J> QuotientProduct<'a, J>
where
    J: DualClosure,
    J::Carrier: PartialAction,
{
    /// Validates the operator on `xs` first.
    pub fn new(j: &'a J, xs: &[Elem<J>], pairs: &[(Elem<J>, Elem<J>)]) -> Result<Self, ClosureError> {
        let closure = verify_dual_closure(j, xs, pairs);
        if let Some(f) = closure.failures().next() {
            return Err(ClosureError::NotDualClosure(format!(
                "{}: {}",
                f.check,
                f.witness.clone().unwrap_or_default()
            )));
        }
        let inv = is_g_invariant(j, xs);
        if let Some(f) = inv.failures().next() {
            return Err(ClosureError::NotInvariant(f.witness.clone().unwrap_or_default()));
        }
        Ok(Self { j, quotient: QuotientAction { j } })
    }

    pub fn quotient(&self) -> &QuotientAction<'a, J> {
        &self.quotient
    }

    pub fn pi(&self, s: &ProductElement<Elem<J>>) -> ProductElement<Elem<J>> {
        ProductElement::new(self.j.apply(&s.e), s.g)
    }

    fn describe(&self, s: &ProductElement<Elem<J>>) -> String {
        format!("({}, {})", self.j.carrier().describe(&s.e), self.quotient.group().element_name(s.g))
    }

    /// π is a morphism on the given pairs and inverse-preserving on `elems`;
    /// its kernel `ρ̃_j` lies inside σ.
    pub fn check_morphism(&self, elems: &[ProductElement<Elem<J>>], pairs: &[ProductPair<J>]) -> Report {
        let src = self.j.carrier();
        let q = &self.quotient;
        let mut member = Tally::new("pi-lands-in-quotient");
        let mut inverse = Tally::new("pi-inverse");
        for s in elems {
            let p = self.pi(s);
            member.record(self.j.apply(&p.e) == p.e && in_product(q, &p), || {
                format!("π{} is not in j(X) ⋊ G", self.describe(s))
            });
            let lhs = product_inv(src, s).map(|t| self.pi(&t));
            let rhs = product_inv(q, &p);
            inverse.record(lhs.is_ok() && lhs == rhs, || format!("π({}^-1) ≠ π(s)^-1", self.describe(s)));
        }
        let mut mult = Tally::new("pi-multiplicative");
        let mut kernel = Tally::new("kernel-in-sigma");
        for (s, t) in pairs {
            let lhs = product_mul(src, s, t).map(|u| self.pi(&u));
            let rhs = product_mul(q, &self.pi(s), &self.pi(t));
            mult.record(lhs.is_ok() && lhs == rhs, || format!("π({}·{}) ≠ π·π", self.describe(s), self.describe(t)));
            if self.pi(s) == self.pi(t) {
                kernel.record(s.g == t.g, || format!("{} ρ̃ {} across σ-classes", self.describe(s), self.describe(t)));
            }
        }
        let mut r = Report::new();
        r.push(member);
        r.push(mult);
        r.push(inverse);
        r.push(kernel);
        r
    }

    /// π maps `elems` onto `targets`, and `[(e,g)]_ρ̃ ↦ (j(e), g)` is a
    /// bijection from the ρ̃-classes.
    pub fn check_quotient_iso(&self, elems: &[ProductElement<Elem<J>>], targets: &[ProductElement<Elem<J>>]) -> Report {
        let mut classes: HashMap<ProductElement<Elem<J>>, usize> = HashMap::new();
        for s in elems {
            *classes.entry(self.pi(s)).or_default() += 1;
        }
        let mut onto = Tally::new("pi-surjective");
        for t in targets {
            onto.record(classes.contains_key(t), || format!("{} has no preimage", self.describe(t)));
        }
        let mut iso = Tally::new("quotient-isomorphism");
        iso.record(classes.len() == targets.len(), || {
            format!("{} ρ̃-classes but {} elements of j(X) ⋊ G", classes.len(), targets.len())
        });
        let mut r = Report::new();
        r.push(onto);
        r.push(iso);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::DEFAULT_CAP;
    use crate::partial_action::{product_elements, FiniteSemilattice};
    use crate::report::Status;

    fn z2() -> FiniteGroup {
        FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]], &[("x", 1)]).unwrap()
    }

    fn chain(n: usize) -> FiniteSemilattice {
        // 0 > 1 > ... > n-1
        let names = (0..n).map(|i| format!("c{i}")).collect();
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| a.max(b)).collect()).collect();
        FiniteSemilattice::from_meet_table(names, &table).unwrap()
    }

    fn all_pairs<T: Clone>(xs: &[T]) -> Vec<(T, T)> {
        xs.iter().flat_map(|a| xs.iter().map(move |b| (a.clone(), b.clone()))).collect()
    }

    #[test]
    fn closure_of_the_origin_is_the_identity_loop() {
        let f = Family::wedge(&z2());
        let c = f.cayley();
        let closed = wedge_close(c, &c.origin());
        let loop0 = c.gens().index_of("@e0").unwrap();
        assert_eq!(closed.edge_indices().collect::<Vec<_>>(), vec![c.edge_index(0, loop0)]);
    }

    #[test]
    fn closure_of_an_edge_adds_four_barred_edges() {
        let f = Family::wedge(&z2());
        let c = f.cayley();
        let x = c.gens().index_of("x").unwrap();
        let g = c.spanned([0], [c.step(0, crate::group::Symbol::pos(x))]);
        let closed = wedge_close(c, &g);
        assert_eq!(closed.edge_count(), 5);
        for (v, l) in [(0, "@e0"), (1, "@e0"), (0, "@e1"), (1, "@e1")] {
            assert!(closed.has_edge_index(c.edge_index(v, c.gens().index_of(l).unwrap())));
        }
        assert!(is_closed(c, &closed));
        assert!(!is_closed(c, &g));
    }

    #[test]
    fn table_closures() {
        let id = TableClosure::identity(chain(3), 3);
        let xs = [0, 1, 2];
        assert!(verify_dual_closure(&id, &xs, &all_pairs(&xs)).passed());
        assert!(lemma31_check(&id, &all_pairs(&xs)).passed());
        assert_eq!(rho_j_classes(&id, &xs).len(), 3);

        let bottom = TableClosure::new(chain(3), vec![2, 2, 2]);
        assert!(verify_dual_closure(&bottom, &xs, &all_pairs(&xs)).passed());
        assert_eq!(rho_j_classes(&bottom, &xs), vec![vec![0, 1, 2]]);

        let up = TableClosure::new(chain(3), vec![0, 0, 2]);
        let r = verify_dual_closure(&up, &xs, &all_pairs(&xs));
        let cl1 = r.get("Cl1").unwrap();
        assert_eq!(cl1.status, Status::Fail);
        assert_eq!(cl1.witness.as_deref(), Some("j(c1) = c0 is not ≤ it"));
    }

    #[test]
    fn wedge_closure_on_z2() {
        let f = Family::margolis_meakin_extended(&z2());
        let j = WedgeClosure::new(&f).unwrap();
        let xs = f.enumerate_graphs(DEFAULT_CAP).unwrap();
        let pairs = all_pairs(&xs);
        assert!(verify_dual_closure(&j, &xs, &pairs).passed());
        assert!(lemma31_check(&j, &pairs).passed());
        assert!(rho_j_congruence_check(&j, &xs, &xs).passed());
        assert!(is_g_invariant(&j, &xs).passed());

        let q = QuotientProduct::new(&j, &xs, &pairs).unwrap();
        let elems = product_elements(j.carrier(), &xs);
        let closed: Vec<Subgraph> = xs.iter().filter(|x| j.apply(x) == **x).cloned().collect();
        let targets = product_elements(q.quotient(), &closed);
        assert_eq!(targets.len(), 9);
        assert!(q.check_morphism(&elems, &all_pairs(&elems)).passed());
        assert!(q.check_quotient_iso(&elems, &targets).passed());
    }

    #[test]
    fn plain_family_is_rejected() {
        let f = Family::margolis_meakin(&z2());
        assert_eq!(WedgeClosure::new(&f).unwrap_err(), ClosureError::NotExtended);
    }
}
