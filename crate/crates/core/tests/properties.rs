use proptest::prelude::*;

use fwedge_core::cayley::{EdgeOrder, Subgraph};
use fwedge_core::closure::{is_closed, wedge_close};
use fwedge_core::expansion::Family;
use fwedge_core::fixtures::{cyclic, klein, s3};
use fwedge_core::fwedge::{eval_term, EnrichedTerm, WedgeMonoid};
use fwedge_core::group::{FiniteGroup, Symbol, Word, IDENTITY};

fn groups() -> Vec<FiniteGroup> {
    vec![cyclic(3), cyclic(4), klein(), s3()]
}

fn word_over(letters: usize, raw: &[(usize, bool)]) -> Word {
    Word(
        raw.iter()
            .map(|&(l, inv)| {
                let l = l % letters;
                if inv {
                    Symbol::neg(l)
                } else {
                    Symbol::pos(l)
                }
            })
            .collect(),
    )
}

fn raw_word() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..16, any::<bool>()), 0..10)
}

fn span(f: &Family, w: &Word) -> Subgraph {
    f.cayley().span_of_path(&f.cayley().path_from_word(IDENTITY, w))
}

fn term(letters: Vec<String>) -> impl Strategy<Value = EnrichedTerm> {
    let leaf = prop_oneof![Just(EnrichedTerm::One), prop::sample::select(letters).prop_map(EnrichedTerm::Letter)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| EnrichedTerm::Concat(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| EnrichedTerm::Inverse(Box::new(a))),
            inner.prop_map(|a| EnrichedTerm::M(Box::new(a))),
        ]
    })
}

fn group_and_term() -> impl Strategy<Value = (usize, EnrichedTerm)> {
    (0usize..4).prop_flat_map(|gi| {
        let letters = groups()[gi].generators().letters().iter().map(|l| l.name.clone()).collect();
        (Just(gi), term(letters))
    })
}

proptest! {
    #[test]
    fn words_evaluate_homomorphically(gi in 0usize..4, u in raw_word(), v in raw_word()) {
        let g = &groups()[gi];
        for f in [Family::margolis_meakin(g), Family::f_expansion(g), Family::margolis_meakin_extended(g)] {
            let (u, v) = (word_over(f.letter_count(), &u), word_over(f.letter_count(), &v));
            let (a, b) = (f.eval_word(&u), f.eval_word(&v));
            prop_assert_eq!(f.eval_word(&u.concat(&v)), f.mul(&a, &b));
            prop_assert_eq!(f.eval_word(&u.inverse()), f.inv(&a));
            prop_assert_eq!(f.mul(&f.mul(&a, &f.inv(&a)), &a), a);
        }
    }

    #[test]
    fn translation_is_invertible(gi in 0usize..4, w in raw_word(), k in 0usize..6) {
        let g = &groups()[gi];
        let f = Family::margolis_meakin_extended(g);
        let x = span(&f, &word_over(f.letter_count(), &w));
        let h = k % g.order();
        let moved = f.cayley().translate(h, &x);
        prop_assert_eq!(moved.vertex_count(), x.vertex_count());
        prop_assert_eq!(moved.edge_count(), x.edge_count());
        prop_assert_eq!(f.cayley().translate(g.inv(h), &moved), x);
    }

    #[test]
    fn spanning_paths_cover_the_graph(gi in 0usize..4, w in raw_word(), k in 0usize..16) {
        let g = &groups()[gi];
        for f in [Family::margolis_meakin(g), Family::margolis_meakin_extended(g)] {
            let c = f.cayley();
            let x = span(&f, &word_over(f.letter_count(), &w));
            let vs: Vec<usize> = x.vertices().collect();
            let h = vs[k % vs.len()];
            for order in [EdgeOrder::Forward, EdgeOrder::Reverse] {
                let p = c.spanning_path_ordered(&x, h, order).unwrap();
                prop_assert!(p.is_well_formed());
                prop_assert_eq!(p.start(), IDENTITY);
                prop_assert_eq!(p.end(), h);
                prop_assert_eq!(c.span_of_path(&p), x.clone());
            }
        }
    }

    #[test]
    fn closure_is_a_closure(gi in 0usize..4, u in raw_word(), v in raw_word()) {
        let g = &groups()[gi];
        let f = Family::margolis_meakin_extended(g);
        let c = f.cayley();
        let x = span(&f, &word_over(f.letter_count(), &u));
        let bigger = x.union(&span(&f, &word_over(f.letter_count(), &v)));
        let jx = wedge_close(c, &x);
        prop_assert!(x.is_subgraph_of(&jx));
        prop_assert!(jx.vertices().eq(x.vertices()));
        prop_assert!(is_closed(c, &jx));
        prop_assert_eq!(wedge_close(c, &jx), jx.clone());
        prop_assert!(jx.is_subgraph_of(&wedge_close(c, &bigger)));
    }

    #[test]
    fn f_map_commutes_with_terms((gi, t) in group_and_term()) {
        let g = &groups()[gi];
        let w = WedgeMonoid::new(g);
        let s = eval_term(&w, &t).unwrap();
        prop_assert!(w.contains(&s));
        prop_assert_eq!(w.f_map(&s), eval_term(w.f_family(), &t).unwrap());
        prop_assert_eq!(w.f_inverse(&w.f_map(&s)), s.clone());
        prop_assert!(w.family().natural_leq(&s, &w.m(&s)));
        prop_assert_eq!(EnrichedTerm::parse(&t.to_string(), g.generators()).unwrap(), t);
    }
}
