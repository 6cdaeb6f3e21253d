//! Reification of expansions as tables and brute-force construction of the
//! canonical morphisms out of `M(G, X)` and `M^∧(G, Y)`.

use std::collections::HashMap;

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cayley::{CayleyError, Edge, EdgeOrder, Path, Subgraph};
use crate::closure::wedge_close;
use crate::expansion::{ExpansionElement, ExpansionError, Family, Flavor};
use crate::fwedge::WedgeMonoid;
use crate::group::{Element, FiniteGroup, GroupError, Word, IDENTITY};
use crate::monoid::{Analysis, FiniteInverseMonoid, MonoidError};
use crate::report::{Report, Tally};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Which pairs a binary check visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairPlan {
    All,
    Sample { count: usize, seed: u64 },
}

impl PairPlan {
    /// Index pairs into a list of `n` items.
    pub fn pairs(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            PairPlan::All => (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect(),
            PairPlan::Sample { count, seed } => {
                if n == 0 {
                    return Vec::new();
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
            }
        }
    }
}

/// An enumerated expansion as an abstract table, with the element listing.
#[derive(Clone, Debug)]
pub struct Reified {
    pub monoid: FiniteInverseMonoid,
    pub elements: Vec<ExpansionElement>,
    pub index: HashMap<ExpansionElement, usize>,
}

/// Tabulates a family. Generators are the letters of `X` (and of `Ḡ` when
/// the family is `M(G, Y)`).
pub fn to_table(family: &Family, cap: u128) -> Result<Reified, VerifyError> {
    let elements = family.enumerate_elements(cap)?;
    let n = elements.len();
    let cells = (n as u128) * (n as u128);
    if cells > cap {
        return Err(ExpansionError::TooLarge { predicted: cells, cap }.into());
    }
    let index: HashMap<ExpansionElement, usize> = elements.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let table: Vec<Vec<usize>> =
        elements.iter().map(|a| elements.iter().map(|b| index[&family.mul(a, b)]).collect()).collect();
    let inv = elements.iter().map(|a| index[&family.inv(a)]).collect();
    let gens = family.cayley().gens();
    let letters = if family.flavor() == Flavor::Closed { gens.plain_len() } else { gens.len() };
    let assignment: IndexMap<String, usize> =
        (0..letters).map(|l| (gens.letter(l).name.clone(), index[&family.generator_image_at(l)])).collect();
    let names = elements.iter().map(|s| family.format_element(s)).collect();
    let identity = index[&family.identity()];
    let monoid = FiniteInverseMonoid::new(Some(names), &table, inv, identity, assignment)?;
    Ok(Reified { monoid, elements, index })
}

/// `M^∧(G, Y)` as a table over `X`.
pub fn wedge_table(w: &WedgeMonoid, cap: u128) -> Result<Reified, VerifyError> {
    to_table(w.family(), cap)
}

/// Checks that `nu` (group element → σ-class) is a morphism sending each
/// `[x]_G` to the class of `ι_S(x)`.
pub fn validate_nu(
    group: &FiniteGroup,
    s: &FiniteInverseMonoid,
    a: &Analysis,
    nu: &[usize],
) -> Result<(), MonoidError> {
    let bad = |m: String| Err(MonoidError::NuNotCanonical(m));
    if nu.len() != group.order() || nu.iter().any(|&c| c >= a.class_count()) {
        return bad("ν must send every group element to a σ-class".into());
    }
    if nu[IDENTITY] != a.class_of[s.identity()] {
        return bad("ν(1) is not the identity class".into());
    }
    for x in group.elements() {
        for y in group.elements() {
            if nu[group.mul(x, y)] != a.quotient_mul[nu[x]][nu[y]] {
                return bad(format!(
                    "ν({}·{}) ≠ ν({})ν({})",
                    group.element_name(x),
                    group.element_name(y),
                    group.element_name(x),
                    group.element_name(y)
                ));
            }
        }
    }
    for l in group.generators().letters() {
        let Some(t) = s.generator(&l.name) else {
            return Err(MonoidError::UnknownGenerator(l.name.clone()));
        };
        if nu[l.image] != a.class_of[t] {
            return bad(format!("ν([{}]_G) is not the class of {}", l.name, l.name));
        }
    }
    Ok(())
}

/// The only candidate for a canonical `ν`: `[w]_G ↦ [[w]_S]_σ` on shortest
/// words, then validated.
pub fn derive_nu(group: &FiniteGroup, s: &FiniteInverseMonoid, a: &Analysis) -> Result<Vec<usize>, MonoidError> {
    let images = s.letter_images(group.generators())?;
    let nu: Vec<usize> = group.shortest_words().iter().map(|w| a.class_of[s.eval_word(&images, w)]).collect();
    validate_nu(group, s, a, &nu)?;
    Ok(nu)
}

/// A map from expansion elements to a finite target, by value table.
#[derive(Clone, Debug)]
pub struct CanonicalMorphism {
    pub source: Vec<ExpansionElement>,
    pub table: Vec<usize>,
}

impl CanonicalMorphism {
    pub fn get(&self, s: &ExpansionElement) -> Option<usize> {
        self.source.iter().position(|t| t == s).map(|i| self.table[i])
    }
}

/// Evaluates labels of spanning paths in a target under letter images.
struct PathEvaluator<'a> {
    family: &'a Family,
    target: &'a FiniteInverseMonoid,
    images: Vec<usize>,
}

impl PathEvaluator<'_> {
    fn eval(&self, p: &Path) -> usize {
        self.target.eval_word(&self.images, &p.label())
    }

    fn describe(&self, s: &ExpansionElement) -> String {
        self.family.format_element(s)
    }

    /// Value along two spanning paths in opposite edge orders; they must agree.
    fn value(&self, s: &ExpansionElement) -> Result<usize, VerifyError> {
        let c = self.family.cayley();
        let a = self.eval(&c.spanning_path_ordered(&s.graph, s.point, EdgeOrder::Forward)?);
        let b = self.eval(&c.spanning_path_ordered(&s.graph, s.point, EdgeOrder::Reverse)?);
        if a != b {
            return Err(MonoidError::WellDefinednessFailure {
                element: self.describe(s),
                first: self.target.element_name(a).to_string(),
                second: self.target.element_name(b).to_string(),
            }
            .into());
        }
        Ok(a)
    }
}

/// `φ: M(G, X) → S` by spanning-path evaluation, for an E-unitary `S`.
pub fn canonical_morphism_m(
    group: &FiniteGroup,
    s: &FiniteInverseMonoid,
    nu: &[usize],
    cap: u128,
) -> Result<CanonicalMorphism, VerifyError> {
    let a = s.analyze();
    if !a.e_unitary {
        return Err(MonoidError::NotEUnitary(not_e_unitary_witness(s, &a)).into());
    }
    validate_nu(group, s, &a, nu)?;
    let family = Family::margolis_meakin(group);
    let eval = PathEvaluator { family: &family, target: s, images: s.letter_images(group.generators())? };
    let source = family.enumerate_elements(cap)?;
    let table = source.iter().map(|x| eval.value(x)).collect::<Result<_, _>>()?;
    Ok(CanonicalMorphism { source, table })
}

fn not_e_unitary_witness(s: &FiniteInverseMonoid, a: &Analysis) -> String {
    let x = a.classes[0].iter().copied().find(|&x| !s.is_idempotent(x)).unwrap_or(0);
    format!("{} is σ-related to 1 but not idempotent", s.element_name(x))
}

/// Identity, generators, multiplicativity, inverses and the square
/// `σ∘φ = ν∘project` for a morphism out of a family.
pub fn check_morphism(
    family: &Family,
    s: &FiniteInverseMonoid,
    nu: &[usize],
    phi: &CanonicalMorphism,
    plan: PairPlan,
) -> Report {
    let a = s.analyze();
    let index: HashMap<&ExpansionElement, usize> = phi.source.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let value = |x: &ExpansionElement| index.get(x).map(|&i| phi.table[i]);
    let name = |x: &ExpansionElement| family.format_element(x);
    let mut r = Report::new();

    let mut id = Tally::new("identity");
    id.record(value(&family.identity()) == Some(s.identity()), || "φ(1) ≠ 1".into());
    r.push(id);

    let mut gens = Tally::new("generators");
    let letters = family.cayley().gens();
    for l in 0..letters.len() {
        let name_l = &letters.letter(l).name;
        if let Some(t) = s.generator(name_l) {
            gens.record(value(&family.generator_image_at(l)) == Some(t), || format!("φ({name_l}) ≠ ι_S({name_l})"));
        }
    }
    r.push(gens);

    let mut mult = Tally::new("multiplicative");
    for (i, j) in plan.pairs(phi.source.len()) {
        let (x, y) = (&phi.source[i], &phi.source[j]);
        let xy = family.mul(x, y);
        mult.record(value(&xy) == Some(s.mul(phi.table[i], phi.table[j])), || {
            format!("φ({}·{}) ≠ φ·φ", name(x), name(y))
        });
    }
    r.push(mult);

    let mut inv = Tally::new("inverse");
    let mut square = Tally::new("diagram");
    for (i, x) in phi.source.iter().enumerate() {
        inv.record(value(&family.inv(x)) == Some(s.inv(phi.table[i])), || format!("φ({}^-1) ≠ φ^-1", name(x)));
        square.record(a.class_of[phi.table[i]] == nu[x.point], || format!("square fails at {}", name(x)));
    }
    r.push(inv);
    r.push(square);
    r
}

/// The Y-generated structure on an F-inverse target: `ḡ ↦ τ_F(ν(g))`.
pub struct WedgeTarget<'a> {
    pub group: &'a FiniteGroup,
    pub monoid: &'a FiniteInverseMonoid,
    pub analysis: Analysis,
    pub nu: Vec<usize>,
    /// `M(G, Y)`.
    pub source: Family,
    images: Vec<usize>,
}

impl<'a> WedgeTarget<'a> {
    pub fn new(group: &'a FiniteGroup, monoid: &'a FiniteInverseMonoid, nu: &[usize]) -> Result<Self, VerifyError> {
        let analysis = monoid.analyze();
        let Some(maxima) = analysis.maxima.clone() else {
            let class = (0..analysis.class_count())
                .find(|&c| {
                    let cl = &analysis.classes[c];
                    !cl.iter().any(|&t| cl.iter().all(|&x| monoid.leq(x, t)))
                })
                .unwrap_or(0);
            return Err(MonoidError::NotFInverse(format!(
                "the σ-class of {} has no maximum",
                monoid.element_name(analysis.classes[class][0])
            ))
            .into());
        };
        validate_nu(group, monoid, &analysis, nu)?;
        let source = Family::margolis_meakin_extended(group);
        let gens = source.cayley().gens();
        let mut images = monoid.letter_images(group.generators())?;
        for l in gens.plain_len()..gens.len() {
            images.push(maxima[nu[gens.image(l)]]);
        }
        Ok(Self { group, monoid, analysis, nu: nu.to_vec(), source, images })
    }

    fn evaluator(&self) -> PathEvaluator<'_> {
        PathEvaluator { family: &self.source, target: self.monoid, images: self.images.clone() }
    }

    /// Value of a letter of `Y` in the target.
    pub fn letter_value(&self, letter: usize) -> usize {
        self.images[letter]
    }

    /// `ψ(A, g)`.
    pub fn psi(&self, s: &ExpansionElement) -> Result<usize, VerifyError> {
        self.evaluator().value(s)
    }

    fn word_value(&self, w: &Word) -> usize {
        self.monoid.eval_word(&self.images, w)
    }
}

/// `φ: M^∧(G, Y) → F` together with the evidence gathered while building it.
#[derive(Clone, Debug)]
pub struct WedgeMorphism {
    /// `π` of every generated element, with `φ` of it.
    pub phi: Vec<(ExpansionElement, usize)>,
    pub generated: usize,
    pub report: Report,
}

/// Builds `ψ` on the elements of `M(G, Y)` reached by words of length at most
/// `max_len` (at most `limit` of them), checks `ψ(A, g) = ψ(A^∧, g)`, and checks that the induced `φ` is
/// a canonical morphism of F-inverse monoids.
pub fn canonical_morphism_fwedge(
    t: &WedgeTarget<'_>,
    max_len: usize,
    limit: usize,
    plan: PairPlan,
) -> Result<WedgeMorphism, VerifyError> {
    let family = &t.source;
    let cayley = family.cayley();
    let s = t.monoid;
    let generated = family.enumerate_by_words_limited(max_len, limit);
    let mut phi: IndexMap<ExpansionElement, usize> = IndexMap::new();
    let mut well = Tally::new("psi-well-defined");
    let mut fact = Tally::new("factorization");
    for x in &generated {
        let v = t.psi(x)?;
        well.record(true, String::new);
        let closed = ExpansionElement::new(wedge_close(cayley, &x.graph), x.point);
        let w = t.psi(&closed)?;
        if v != w {
            return Err(MonoidError::FactorizationFailure(format!(
                "ψ{} = {} but ψ of its closure is {}",
                family.format_element(x),
                s.element_name(v),
                s.element_name(w)
            ))
            .into());
        }
        fact.record(true, String::new);
        phi.insert(closed, w);
    }

    let wm = WedgeMonoid::new(t.group);
    let closed_family = wm.family();
    let name = |x: &ExpansionElement| closed_family.format_element(x);
    let phi_of = |x: &ExpansionElement| -> Result<usize, VerifyError> {
        match phi.get(x) {
            Some(&v) => Ok(v),
            None => t.psi(x),
        }
    };
    let elems: Vec<&ExpansionElement> = phi.keys().collect();

    let mut id = Tally::new("phi-identity");
    id.record(phi_of(&wm.identity())? == s.identity(), || "φ(1) ≠ 1".into());
    let mut gens = Tally::new("phi-generators");
    for l in t.group.generators().letters() {
        let x = wm.generator_image(&l.name)?;
        let expected = s.generator(&l.name).expect("validated by ν");
        gens.record(phi_of(&x)? == expected, || format!("φ({}) ≠ ι_F({})", l.name, l.name));
    }
    let mut mult = Tally::new("phi-multiplicative");
    for (i, j) in plan.pairs(elems.len()) {
        let (x, y) = (elems[i], elems[j]);
        let lhs = phi_of(&wm.mul(x, y))?;
        mult.record(lhs == s.mul(phi[x], phi[y]), || format!("φ({}·{}) ≠ φ·φ", name(x), name(y)));
    }
    let mut inv = Tally::new("phi-inverse");
    let mut m = Tally::new("phi-preserves-m");
    let mut square = Tally::new("diagram");
    for x in &elems {
        let v = phi[*x];
        inv.record(phi_of(&wm.inv(x))? == s.inv(v), || format!("φ({}^-1) ≠ φ^-1", name(x)));
        m.record(Some(phi_of(&wm.m(x))?) == t.analysis.m(v), || format!("φ(m{}) ≠ m(φ)", name(x)));
        square.record(t.analysis.class_of[v] == t.nu[x.point], || format!("square fails at {}", name(x)));
    }

    let mut report = Report::new();
    for tally in [well, fact, id, gens, mult, inv, m, square] {
        report.push(tally);
    }
    Ok(WedgeMorphism { phi: phi.into_iter().collect(), generated: generated.len(), report })
}

/// Outcome of one instance of the single-edge step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeStep {
    pub holds: bool,
    pub witness: Option<String>,
}

/// For `C = B + e` with `e` a barred edge between vertices of `B`: builds
/// `w = w' p w''` spanning `B` and `w̃ = w' e p^-1 p w''` spanning `C`, and
/// checks `[ḡ][u]^-1[u] = [u]`, `[u] ≤ [ḡ]`, `[l(w)] = ψ(B, h)`,
/// `[l(w̃)] = ψ(C, h)` and `ψ(B, h) = ψ(C, h)`.
///
/// `w'` is a shortest path from the origin to `α(e)` in `B`, `p` a shortest
/// path from `α(e)` to `ω(e)` in `B`, and `w''` a shortest path back to the
/// origin followed by a spanning path of `B` ending at `h`.
pub fn single_edge_step_check(t: &WedgeTarget<'_>, b: &Subgraph, e: Edge, h: Element) -> Result<EdgeStep, VerifyError> {
    let cayley = t.source.cayley();
    let fail = |m: String| Ok(EdgeStep { holds: false, witness: Some(m) });
    if !cayley.gens().is_barred(e.label.letter) || e.label.inverse {
        return fail("e must be a positive barred edge".into());
    }
    if !b.has_vertex(e.src) || !b.has_vertex(e.dst) || !b.has_vertex(h) {
        return fail("endpoints must lie in B".into());
    }
    let mut c = b.clone();
    cayley.add_edge(&mut c, e);

    let w1 = cayley.shortest_path(b, IDENTITY, e.src).ok_or(CayleyError::NotConnected)?;
    let p = cayley.shortest_path(b, e.src, e.dst).ok_or(CayleyError::NotConnected)?;
    let back = cayley.shortest_path(b, e.dst, IDENTITY).ok_or(CayleyError::NotConnected)?;
    let w2 = back.then(&cayley.spanning_path(b, h)?);
    let w = w1.clone().then(&p).then(&w2);
    let edge = Path { base: e.src, edges: vec![e] };
    let w_tilde = w1.clone().then(&edge).then(&p.inverse()).then(&p).then(&w2);

    let describe = |g: &Subgraph| t.source.format_graph(g);
    if cayley.span_of_path(&w) != *b || cayley.span_of_path(&w_tilde) != c {
        return fail(format!("paths do not span B = {} and C = {}", describe(b), describe(&c)));
    }
    let s = t.monoid;
    let gbar = t.letter_value(e.label.letter);
    let u = t.word_value(&p.label());
    let name = |x: usize| s.element_name(x).to_string();
    if s.mul(s.mul(gbar, s.inv(u)), u) != u {
        return fail(format!("[ḡ][u]^-1[u] ≠ [u] for u = {}", name(u)));
    }
    if !s.leq(u, gbar) {
        return fail(format!("[u] = {} is not below [ḡ] = {}", name(u), name(gbar)));
    }
    let lw = t.word_value(&w.label());
    let lwt = t.word_value(&w_tilde.label());
    let psi_b = t.psi(&ExpansionElement::new(b.clone(), h))?;
    let psi_c = t.psi(&ExpansionElement::new(c.clone(), h))?;
    if lw != psi_b || lwt != psi_c {
        return fail(format!("path values disagree with ψ on B = {}", describe(b)));
    }
    if psi_b != psi_c {
        return fail(format!("ψ(B, h) = {} but ψ(C, h) = {} for B = {}", name(psi_b), name(psi_c), describe(b)));
    }
    Ok(EdgeStep { holds: true, witness: None })
}

/// Every barred positive edge between vertices of `b` that `b` lacks.
pub fn missing_barred_edges(family: &Family, b: &Subgraph) -> Vec<Edge> {
    let cayley = family.cayley();
    let gens = cayley.gens();
    let mut out = Vec::new();
    for a in b.vertices() {
        for l in gens.plain_len()..gens.len() {
            let idx = cayley.edge_index(a, l);
            let e = cayley.edge_at(idx);
            if !b.has_edge_index(idx) && b.has_vertex(e.dst) {
                out.push(e);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::DEFAULT_CAP;

    fn z2() -> FiniteGroup {
        FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]], &[("x", 1)]).unwrap()
    }

    #[test]
    fn reified_z2_expansions() {
        let g = z2();
        let m = to_table(&Family::margolis_meakin(&g), DEFAULT_CAP).unwrap();
        assert_eq!(m.monoid.order(), 7);
        let a = m.monoid.analyze();
        assert!(a.e_unitary);
        assert!(!a.is_f_inverse());
        assert_eq!(a.class_count(), 2);

        let f = to_table(&Family::f_expansion(&g), DEFAULT_CAP).unwrap();
        let a = f.monoid.analyze();
        assert!(a.is_f_inverse());
        let tau: Vec<String> = (0..2).map(|c| f.monoid.element_name(a.tau(c).unwrap()).to_string()).collect();
        assert_eq!(tau, vec!["(V={e0}; E={}; g=e0)", "(V={e0,e1}; E={}; g=e1)"]);
    }

    #[test]
    fn morphism_into_the_group_is_projection() {
        let g = z2();
        let s = FiniteInverseMonoid::from_group(&g);
        let nu = derive_nu(&g, &s, &s.analyze()).unwrap();
        let phi = canonical_morphism_m(&g, &s, &nu, DEFAULT_CAP).unwrap();
        for (x, &v) in phi.source.iter().zip(&phi.table) {
            assert_eq!(v, x.point);
        }
        assert!(check_morphism(&Family::margolis_meakin(&g), &s, &nu, &phi, PairPlan::All).passed());
    }

    #[test]
    fn self_morphism_is_identity() {
        let g = z2();
        let family = Family::margolis_meakin(&g);
        let r = to_table(&family, DEFAULT_CAP).unwrap();
        let nu = derive_nu(&g, &r.monoid, &r.monoid.analyze()).unwrap();
        let phi = canonical_morphism_m(&g, &r.monoid, &nu, DEFAULT_CAP).unwrap();
        for (x, &v) in phi.source.iter().zip(&phi.table) {
            assert_eq!(r.index[x], v);
        }
    }

    #[test]
    fn non_canonical_nu_is_rejected() {
        let g = z2();
        let s = FiniteInverseMonoid::from_group(&g);
        let err = canonical_morphism_m(&g, &s, &[0, 0], DEFAULT_CAP).unwrap_err();
        assert!(matches!(err, VerifyError::Monoid(MonoidError::NuNotCanonical(_))));
    }

    #[test]
    fn wedge_morphism_into_f() {
        let g = z2();
        let f = to_table(&Family::f_expansion(&g), DEFAULT_CAP).unwrap();
        let nu = derive_nu(&g, &f.monoid, &f.monoid.analyze()).unwrap();
        let t = WedgeTarget::new(&g, &f.monoid, &nu).unwrap();
        let phi = canonical_morphism_fwedge(&t, 6, usize::MAX, PairPlan::All).unwrap();
        assert!(phi.report.passed(), "{}", phi.report);
        assert_eq!(phi.phi.len(), 9);
        let w = WedgeMonoid::new(&g);
        for (x, v) in &phi.phi {
            assert_eq!(f.index[&w.f_map(x)], *v);
        }
    }

    #[test]
    fn wedge_target_must_be_f_inverse() {
        let g = z2();
        let m = to_table(&Family::margolis_meakin(&g), DEFAULT_CAP).unwrap();
        let nu = derive_nu(&g, &m.monoid, &m.monoid.analyze()).unwrap();
        assert!(matches!(WedgeTarget::new(&g, &m.monoid, &nu), Err(VerifyError::Monoid(MonoidError::NotFInverse(_)))));
    }

    #[test]
    fn edge_steps_in_z2() {
        let g = z2();
        let f = to_table(&Family::f_expansion(&g), DEFAULT_CAP).unwrap();
        let nu = derive_nu(&g, &f.monoid, &f.monoid.analyze()).unwrap();
        let t = WedgeTarget::new(&g, &f.monoid, &nu).unwrap();
        let c = t.source.cayley();
        let loop0 = c.edge_at(c.edge_index(0, c.gens().index_of("@e0").unwrap()));
        assert!(single_edge_step_check(&t, &c.origin(), loop0, 0).unwrap().holds);

        let x = c.gens().index_of("x").unwrap();
        let gamma_x = c.spanned([0], [c.edge_at(c.edge_index(0, x))]);
        let e = c.edge_at(c.edge_index(0, c.gens().index_of("@e1").unwrap()));
        assert!(single_edge_step_check(&t, &gamma_x, e, 1).unwrap().holds);

        for b in t.source.enumerate_graphs(DEFAULT_CAP).unwrap() {
            for e in missing_barred_edges(&t.source, &b) {
                for h in b.vertices() {
                    assert!(single_edge_step_check(&t, &b, e, h).unwrap().holds);
                }
            }
        }
    }
}
