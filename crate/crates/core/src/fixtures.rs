//! Small groups and hand-built inverse monoids used by the test suites and
//! the CLI.

use indexmap::IndexMap;

use crate::group::FiniteGroup;
use crate::monoid::{FiniteInverseMonoid, MonoidError};

fn named(name: &str, table: Vec<Vec<usize>>, gens: &[(&str, usize)]) -> FiniteGroup {
    let gens: Vec<(String, usize)> = gens.iter().map(|(n, g)| (n.to_string(), *g)).collect();
    FiniteGroup::from_named_table(name, None, &table, &gens).expect("fixture groups are valid")
}

pub fn trivial() -> FiniteGroup {
    named("trivial", vec![vec![0]], &[])
}

/// `Z_n` generated by `x = 1`.
pub fn cyclic(n: usize) -> FiniteGroup {
    cyclic_with(n, &[("x", 1)])
}

pub fn cyclic_with(n: usize, gens: &[(&str, usize)]) -> FiniteGroup {
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    named(&format!("Z{n}"), table, gens)
}

/// `Z_2 × Z_2` generated by `a` and `b`.
pub fn klein() -> FiniteGroup {
    let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    named("Klein", table, &[("a", 1), ("b", 2)])
}

/// The symmetric group on three points, generated by two transpositions.
pub fn s3() -> FiniteGroup {
    let gens = [("x".to_string(), vec![1, 0, 2]), ("y".to_string(), vec![0, 2, 1])];
    FiniteGroup::from_named_permutations("S3", 3, &gens).expect("fixture group is valid")
}

/// The groups of order at most 4 the exhaustive suites run over.
pub fn small_groups() -> Vec<FiniteGroup> {
    vec![trivial(), cyclic(2), cyclic(3), cyclic(4), klein()]
}

/// Fixtures with two generators, for the cardinality cross-checks.
pub fn two_generator_groups() -> Vec<FiniteGroup> {
    vec![
        cyclic_with(2, &[("x", 1), ("y", 1)]),
        cyclic_with(3, &[("x", 1), ("y", 2)]),
        cyclic_with(4, &[("x", 1), ("y", 2)]),
    ]
}

fn assignment(g: &FiniteGroup, shift: impl Fn(usize) -> usize) -> IndexMap<String, usize> {
    g.generators().letters().iter().map(|l| (l.name.clone(), shift(l.image))).collect()
}

/// `G^1`: the group with a new identity adjoined; `x ↦ x`. Fails when `X`
/// is empty, since the old identity is then not generated.
pub fn with_adjoined_identity(g: &FiniteGroup) -> Result<FiniteInverseMonoid, MonoidError> {
    let n = g.order();
    let table: Vec<Vec<usize>> = (0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| match (a, b) {
                    (0, b) => b,
                    (a, 0) => a,
                    (a, b) => 1 + g.mul(a - 1, b - 1),
                })
                .collect()
        })
        .collect();
    let inv = (0..=n).map(|a| if a == 0 { 0 } else { 1 + g.inv(a - 1) }).collect();
    let names = std::iter::once("1".to_string()).chain(g.elements().map(|a| g.element_name(a).to_string())).collect();
    FiniteInverseMonoid::new(Some(names), &table, inv, 0, assignment(g, |x| x + 1))
}

/// `G × {1 > 0}` with `x ↦ (x, 0)`; element `2g + c` is `(g, c)`. Fails
/// when `X` is empty.
pub fn with_chain(g: &FiniteGroup) -> Result<FiniteInverseMonoid, MonoidError> {
    let n = g.order();
    let table: Vec<Vec<usize>> =
        (0..2 * n).map(|a| (0..2 * n).map(|b| 2 * g.mul(a / 2, b / 2) + (a % 2).min(b % 2)).collect()).collect();
    let inv = (0..2 * n).map(|a| 2 * g.inv(a / 2) + a % 2).collect();
    let names = (0..2 * n).map(|a| format!("({},{})", g.element_name(a / 2), a % 2)).collect();
    FiniteInverseMonoid::new(Some(names), &table, inv, 1, assignment(g, |x| 2 * x))
}
