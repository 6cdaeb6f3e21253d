//! Finite inverse monoids given extensionally, and their structure:
//! idempotents, natural order, `σ`, E-unitarity, F-inverse maxima.

use std::collections::VecDeque;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Element, FiniteGroup, GeneratorSet, GroupError, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("invalid inverse monoid: {0}")]
    InvalidMonoid(String),
    #[error("monoid is not E-unitary: {0}")]
    NotEUnitary(String),
    #[error("monoid is not F-inverse: {0}")]
    NotFInverse(String),
    #[error("no canonical group morphism: {0}")]
    NuNotCanonical(String),
    #[error("value of {element} depends on the spanning path: {first} vs {second}")]
    WellDefinednessFailure { element: String, first: String, second: String },
    #[error("morphism does not factor through the closure quotient at {0}")]
    FactorizationFailure(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("malformed monoid file: {0}")]
    Format(String),
}

#[derive(Serialize, Deserialize)]
struct MonoidFile {
    order: usize,
    table: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    #[serde(default)]
    generators: IndexMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<String>>,
}

/// A validated finite inverse monoid with an assignment map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInverseMonoid {
    names: Vec<String>,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    gens: IndexMap<String, usize>,
}

/// Derived structure of a finite inverse monoid.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub idempotents: Vec<usize>,
    /// σ-class of every element; the class of the identity is `0`.
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    /// Multiplication of σ-classes.
    pub quotient_mul: Vec<Vec<usize>>,
    pub e_unitary: bool,
    /// `τ_F`: the maximum of each σ-class, when every class has one.
    pub maxima: Option<Vec<usize>>,
}

impl Analysis {
    pub fn is_f_inverse(&self) -> bool {
        self.maxima.is_some()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn sigma(&self, s: usize, t: usize) -> bool {
        self.class_of[s] == self.class_of[t]
    }

    /// `τ_F` applied to a class.
    pub fn tau(&self, class: usize) -> Option<usize> {
        self.maxima.as_ref().map(|m| m[class])
    }

    /// `m(s)`, the maximum of the σ-class of `s`.
    pub fn m(&self, s: usize) -> Option<usize> {
        self.tau(self.class_of[s])
    }
}

struct Raw<'a> {
    n: usize,
    mul: &'a [usize],
    inv: &'a [usize],
}

impl Raw<'_> {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    fn idempotents(&self) -> Vec<usize> {
        (0..self.n).filter(|&s| self.mul(s, s) == s).collect()
    }

    /// σ-classes via the minimum idempotent `z`: `s σ t` iff `zs = zt`.
    fn sigma_classes(&self, identity: usize, idempotents: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
        let z = idempotents.iter().fold(identity, |acc, &e| self.mul(acc, e));
        let mut key_to_class: IndexMap<usize, usize> = IndexMap::new();
        key_to_class.insert(self.mul(z, identity), 0);
        let mut class_of = vec![0; self.n];
        let mut classes = vec![Vec::new()];
        for (s, slot) in class_of.iter_mut().enumerate() {
            let key = self.mul(z, s);
            let next = key_to_class.len();
            let c = *key_to_class.entry(key).or_insert(next);
            if c == classes.len() {
                classes.push(Vec::new());
            }
            *slot = c;
            classes[c].push(s);
        }
        (class_of, classes)
    }

    fn leq(&self, s: usize, t: usize) -> bool {
        s == self.mul(self.mul(s, self.inv[s]), t)
    }

    fn maxima(&self, classes: &[Vec<usize>]) -> Option<Vec<usize>> {
        classes.iter().map(|c| c.iter().copied().find(|&t| c.iter().all(|&s| self.leq(s, t)))).collect()
    }

    fn closure(&self, identity: usize, steps: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[identity] = true;
        let mut queue = VecDeque::from([identity]);
        while let Some(a) = queue.pop_front() {
            for &g in steps {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen
    }
}

impl FiniteInverseMonoid {
    /// Validates and builds a monoid.
    ///
    /// Generation is checked for the assignment map, or for the enriched
    /// signature (adding σ-class maxima) when the plain closure falls short.
    /// Associativity is checked with Light's test over that generating set.
    pub fn new(
        names: Option<Vec<String>>,
        table: &[Vec<usize>],
        inv: Vec<usize>,
        identity: usize,
        gens: IndexMap<String, usize>,
    ) -> Result<Self, MonoidError> {
        let bad = |m: String| MonoidError::InvalidMonoid(m);
        let n = table.len();
        if n == 0 || inv.len() != n || identity >= n {
            return Err(bad("table, inverse and identity must agree on the order".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (r, row) in table.iter().enumerate() {
            if row.len() != n || row.iter().any(|&v| v >= n) {
                return Err(bad(format!("row {r} is malformed")));
            }
            mul.extend_from_slice(row);
        }
        let names = names.unwrap_or_else(|| (0..n).map(|i| format!("s{i}")).collect());
        if names.len() != n {
            return Err(bad("wrong number of element names".into()));
        }
        if let Some((name, _)) = gens.iter().find(|(_, &v)| v >= n) {
            return Err(bad(format!("generator {name} is out of range")));
        }
        let raw = Raw { n, mul: &mul, inv: &inv };
        for s in 0..n {
            if raw.mul(identity, s) != s || raw.mul(s, identity) != s {
                return Err(bad(format!("identity law fails at {}", names[s])));
            }
            let t = inv[s];
            if inv[t] != s {
                return Err(bad(format!("inverse of {} is not an involution", names[s])));
            }
            if raw.mul(raw.mul(s, t), s) != s {
                return Err(bad(format!("s s^-1 s != s for s = {}", names[s])));
            }
            if raw.mul(raw.mul(t, s), t) != t {
                return Err(bad(format!("s^-1 s s^-1 != s^-1 for s = {}", names[s])));
            }
        }

        let mut steps: Vec<usize> = gens.values().flat_map(|&g| [g, inv[g]]).collect();
        let mut reached = raw.closure(identity, &steps);
        if reached.iter().any(|r| !r) {
            let idem = raw.idempotents();
            let (_, classes) = raw.sigma_classes(identity, &idem);
            if let Some(max) = raw.maxima(&classes) {
                steps.extend(max.iter().flat_map(|&m| [m, inv[m]]));
                reached = raw.closure(identity, &steps);
            }
        }
        if let Some(s) = reached.iter().position(|r| !r) {
            return Err(bad(format!("generators do not reach {}", names[s])));
        }
        steps.push(identity);
        steps.sort_unstable();
        steps.dedup();
        for &a in &steps {
            for x in 0..n {
                let xa = raw.mul(x, a);
                for y in 0..n {
                    if raw.mul(xa, y) != raw.mul(x, raw.mul(a, y)) {
                        return Err(bad(format!("not associative: ({}*{})*{}", names[x], names[a], names[y])));
                    }
                }
            }
        }
        let idem = raw.idempotents();
        for &e in &idem {
            for &f in &idem {
                if raw.mul(e, f) != raw.mul(f, e) {
                    return Err(bad(format!("idempotents {} and {} do not commute", names[e], names[f])));
                }
            }
        }
        Ok(Self { names, mul, inv, identity, gens })
    }

    /// A group viewed as an inverse monoid with the same generators.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.order();
        let table: Vec<Vec<usize>> = g.elements().map(|a| g.elements().map(|b| g.mul(a, b)).collect()).collect();
        let gens = g.generators().letters().iter().map(|l| (l.name.clone(), l.image)).collect();
        let names = g.elements().map(|a| g.element_name(a).to_string()).collect();
        Self::new(Some(names), &table, (0..n).map(|a| g.inv(a)).collect(), 0, gens).expect("groups are inverse monoids")
    }

    pub fn from_json(text: &str) -> Result<Self, MonoidError> {
        let f: MonoidFile = serde_json::from_str(text).map_err(|e| MonoidError::Format(e.to_string()))?;
        if f.order != f.table.len() {
            return Err(MonoidError::Format("order does not match the table".into()));
        }
        Self::new(f.elements, &f.table, f.inv, f.identity, f.generators)
    }

    pub fn to_json(&self) -> String {
        let n = self.order();
        let f = MonoidFile {
            order: n,
            table: (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect(),
            inv: self.inv.clone(),
            identity: self.identity,
            generators: self.gens.clone(),
            elements: Some(self.names.clone()),
        };
        serde_json::to_string_pretty(&f).expect("monoid file serializes")
    }

    pub fn order(&self) -> usize {
        self.inv.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &IndexMap<String, usize> {
        &self.gens
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.gens.get(name).copied()
    }

    pub fn element_name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.mul(s, s) == s
    }

    /// Natural partial order: `s ≤ t` iff `s = s s^-1 t`.
    pub fn leq(&self, s: usize, t: usize) -> bool {
        s == self.mul(self.mul(s, self.inv(s)), t)
    }

    /// `σ` by its definition: some idempotent `e` has `es = et`.
    pub fn sigma_by_definition(&self, s: usize, t: usize) -> bool {
        (0..self.order()).any(|e| self.is_idempotent(e) && self.mul(e, s) == self.mul(e, t))
    }

    /// Images of a generating set's letters, looked up by name.
    pub fn letter_images(&self, gens: &GeneratorSet) -> Result<Vec<usize>, MonoidError> {
        gens.letters()
            .iter()
            .map(|l| self.generator(&l.name).ok_or_else(|| MonoidError::UnknownGenerator(l.name.clone())))
            .collect()
    }

    /// Value of a word under explicit letter images.
    pub fn eval_word(&self, images: &[usize], w: &Word) -> usize {
        w.symbols().iter().fold(self.identity, |acc, s| {
            let x = images[s.letter];
            self.mul(acc, if s.inverse { self.inv(x) } else { x })
        })
    }

    pub fn analyze(&self) -> Analysis {
        let raw = Raw { n: self.order(), mul: &self.mul, inv: &self.inv };
        let idempotents = raw.idempotents();
        let (class_of, classes) = raw.sigma_classes(self.identity, &idempotents);
        let quotient_mul = (0..classes.len())
            .map(|a| (0..classes.len()).map(|b| class_of[self.mul(classes[a][0], classes[b][0])]).collect())
            .collect();
        let e_unitary = classes[0].iter().all(|&s| self.is_idempotent(s));
        let maxima = raw.maxima(&classes);
        Analysis { idempotents, class_of, classes, quotient_mul, e_unitary, maxima }
    }

    /// `S/σ` as a group generated by the classes of the generators.
    pub fn sigma_quotient(&self, a: &Analysis) -> Result<FiniteGroup, MonoidError> {
        for s in 0..self.order() {
            for t in 0..self.order() {
                if a.class_of[self.mul(s, t)] != a.quotient_mul[a.class_of[s]][a.class_of[t]] {
                    return Err(MonoidError::InvalidMonoid("σ is not a congruence".into()));
                }
            }
        }
        let names = (0..a.class_count()).map(|c| format!("c{c}")).collect();
        let gens: Vec<(String, Element)> = self.gens.iter().map(|(n, &s)| (n.clone(), a.class_of[s])).collect();
        FiniteGroup::from_named_table("S/sigma", Some(names), &a.quotient_mul, &gens)
            .map_err(|e: GroupError| MonoidError::InvalidMonoid(format!("σ-quotient is not a group: {e}")))
    }
}
