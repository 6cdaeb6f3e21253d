//! Finite X-generated groups, generating sets, words and their values.
//!
//! Group elements are indices `0..n` with `0` the identity. A group always
//! carries its plain generating set `X`; the extended set `Y = X ∪ Ḡ` adds one
//! barred letter `@<name>` per element.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a group element. The identity is always `0`.
pub type Element = usize;

pub const IDENTITY: Element = 0;

/// Prefix marking the barred copy `ḡ` of a group element.
pub const BAR_PREFIX: char = '@';

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    EmptyTable,
    #[error("table row {row} has {len} entries, expected {expected}")]
    RaggedTable { row: usize, len: usize, expected: usize },
    #[error("table entry {value} at ({row}, {col}) is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("table has no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(String),
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("generators do not generate the group: {0} is unreachable")]
    GeneratorsDoNotGenerate(String),
    #[error("generator {name:?} maps to {index}, which is not an element")]
    UnknownElement { name: String, index: usize },
    #[error("generator {0:?} is not a permutation")]
    NotAPermutation(String),
    #[error("invalid letter name {0:?}")]
    InvalidLetterName(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("expected {expected} element names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("malformed token {0:?}")]
    BadToken(String),
    #[error("malformed group file: {0}")]
    Format(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    Plain,
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LetterFlavor {
    Plain,
    Barred,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub image: Element,
    pub flavor: LetterFlavor,
}

/// An ordered generating alphabet together with its assignment map into a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    kind: GeneratorKind,
    letters: Vec<Letter>,
    lookup: HashMap<String, usize>,
    // element -> index of its barred letter; empty for plain sets
    barred: Vec<usize>,
    plain_count: usize,
}

impl GeneratorSet {
    fn plain(letters: Vec<Letter>) -> Self {
        let lookup = letters.iter().enumerate().map(|(i, l)| (l.name.clone(), i)).collect();
        let plain_count = letters.len();
        Self { kind: GeneratorKind::Plain, letters, lookup, barred: Vec::new(), plain_count }
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of letters from `X`; they always come first.
    pub fn plain_len(&self) -> usize {
        self.plain_count
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, index: usize) -> &Letter {
        &self.letters[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    pub fn image(&self, index: usize) -> Element {
        self.letters[index].image
    }

    pub fn is_barred(&self, index: usize) -> bool {
        self.letters[index].flavor == LetterFlavor::Barred
    }

    /// Letter index of `ḡ`, for extended sets.
    pub fn barred_letter(&self, g: Element) -> Option<usize> {
        self.barred.get(g).copied()
    }
}

/// A signed occurrence of a letter: `x` or `x^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub letter: usize,
    pub inverse: bool,
}

impl Symbol {
    pub fn pos(letter: usize) -> Self {
        Self { letter, inverse: false }
    }

    pub fn neg(letter: usize) -> Self {
        Self { letter, inverse: true }
    }

    pub fn flip(self) -> Self {
        Self { inverse: !self.inverse, ..self }
    }
}

/// Element of the free involutive monoid over a generating set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Formal inverse: reversed with every exponent flipped.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.flip()).collect())
    }

    /// Parses whitespace-separated tokens `name` or `name^-1`.
    pub fn parse(text: &str, gens: &GeneratorSet) -> Result<Word, GroupError> {
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            let (name, inverse) = match token.split_once('^') {
                None => (token, false),
                Some((name, "-1")) if !name.is_empty() => (name, true),
                Some(_) => return Err(GroupError::BadToken(token.to_string())),
            };
            let letter = gens.index_of(name).ok_or_else(|| GroupError::UnknownLetter(name.to_string()))?;
            out.push(Symbol { letter, inverse });
        }
        Ok(Word(out))
    }

    pub fn display<'a>(&'a self, gens: &'a GeneratorSet) -> impl fmt::Display + 'a {
        WordDisplay { word: self, gens }
    }
}

struct WordDisplay<'a> {
    word: &'a Word,
    gens: &'a GeneratorSet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.gens.letter(s.letter).name)?;
            if s.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// A finite group given by its multiplication table, with a plain generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    names: Vec<String>,
    mul: Vec<Element>,
    inv: Vec<Element>,
    gens: GeneratorSet,
}

#[derive(Debug, Serialize, Deserialize)]
struct TableFile {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    elements: Option<Vec<String>>,
    table: Vec<Vec<usize>>,
    #[serde(default)]
    generators: IndexMap<String, usize>,
}

#[derive(Debug, Deserialize)]
struct PermutationFile {
    #[serde(default)]
    name: Option<String>,
    points: usize,
    #[serde(default)]
    generators: IndexMap<String, Vec<usize>>,
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "1"
        && !name.starts_with(BAR_PREFIX)
        && name.chars().all(|c| !c.is_whitespace() && !"^(){},;=\"".contains(c))
}

impl FiniteGroup {
    /// Builds a group from a Cayley table with default element names `e0, e1, …`.
    pub fn from_cayley_table(table: &[Vec<usize>], gens: &[(&str, Element)]) -> Result<Self, GroupError> {
        let gens: Vec<(String, Element)> = gens.iter().map(|(n, g)| (n.to_string(), *g)).collect();
        Self::from_named_table("G", None, table, &gens)
    }

    /// Builds and validates a group from a Cayley table.
    ///
    /// If the identity is not at index 0 the elements are relabelled by
    /// swapping it into place; names and generator images follow.
    pub fn from_named_table(
        name: &str,
        names: Option<Vec<String>>,
        table: &[Vec<usize>],
        gens: &[(String, Element)],
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::EmptyTable);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::RaggedTable { row, len: r.len(), expected: n });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::EntryOutOfRange { row, col, value });
            }
        }
        let mut names = names.unwrap_or_else(|| default_names(n));
        if names.len() != n {
            return Err(GroupError::NameCount { expected: n, got: names.len() });
        }
        let mut seen = HashMap::new();
        for nm in &names {
            if !valid_name(nm) {
                return Err(GroupError::InvalidLetterName(nm.clone()));
            }
            if seen.insert(nm.clone(), ()).is_some() {
                return Err(GroupError::DuplicateName(nm.clone()));
            }
        }

        let e = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a)).ok_or(GroupError::NoIdentity)?;
        // relabelling swaps 0 and e
        let relabel = |i: usize| {
            if i == e {
                0
            } else if i == 0 {
                e
            } else {
                i
            }
        };
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel(a) * n + relabel(b)] = relabel(table[a][b]);
            }
        }
        names.swap(0, e);

        let mut inv = vec![0; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul[a * n + b] == 0 && mul[b * n + a] == 0)
                .ok_or_else(|| GroupError::NoInverse(names[a].clone()))?;
            inv[a] = b;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b];
                for c in 0..n {
                    if mul[ab * n + c] != mul[a * n + mul[b * n + c]] {
                        return Err(GroupError::NotAssociative {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }

        let mut letters = Vec::with_capacity(gens.len());
        let mut letter_names = HashMap::new();
        for (lname, img) in gens {
            if !valid_name(lname) {
                return Err(GroupError::InvalidLetterName(lname.clone()));
            }
            if letter_names.insert(lname.clone(), ()).is_some() {
                return Err(GroupError::DuplicateName(lname.clone()));
            }
            if *img >= n {
                return Err(GroupError::UnknownElement { name: lname.clone(), index: *img });
            }
            letters.push(Letter { name: lname.clone(), image: relabel(*img), flavor: LetterFlavor::Plain });
        }

        let group = FiniteGroup { name: name.to_string(), names, mul, inv, gens: GeneratorSet::plain(letters) };
        let reached = group.closure_of_generators();
        if let Some(missing) = (0..n).find(|&g| !reached[g]) {
            return Err(GroupError::GeneratorsDoNotGenerate(group.names[missing].clone()));
        }
        Ok(group)
    }

    /// Closure of the given permutations under composition.
    ///
    /// Permutations act on the right: the product `p q` applies `p` first.
    /// Elements are indexed identity first, then breadth-first over right
    /// multiplication by the generators in input order.
    pub fn from_permutations(gens: &[(&str, Vec<usize>)]) -> Result<Self, GroupError> {
        let points = gens.first().map_or(0, |(_, p)| p.len());
        let gens: Vec<(String, Vec<usize>)> = gens.iter().map(|(n, p)| (n.to_string(), p.clone())).collect();
        Self::from_named_permutations("G", points, &gens)
    }

    pub fn from_named_permutations(
        name: &str,
        points: usize,
        gens: &[(String, Vec<usize>)],
    ) -> Result<Self, GroupError> {
        for (gname, p) in gens {
            let mut hit = vec![false; points];
            if p.len() != points {
                return Err(GroupError::NotAPermutation(gname.clone()));
            }
            for &i in p {
                if i >= points || hit[i] {
                    return Err(GroupError::NotAPermutation(gname.clone()));
                }
                hit[i] = true;
            }
        }
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { p.iter().map(|&i| q[i]).collect() };

        let identity: Vec<usize> = (0..points).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut perms = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (_, g) in gens {
                let next = compose(&perms[i], g);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), perms.len());
                    queue.push_back(perms.len());
                    perms.push(next);
                }
            }
        }
        let n = perms.len();
        let table: Vec<Vec<usize>> =
            perms.iter().map(|p| perms.iter().map(|q| index[&compose(p, q)]).collect()).collect();
        let gens: Vec<(String, Element)> = gens.iter().map(|(gname, p)| (gname.clone(), index[p])).collect();
        Self::from_named_table(name, Some(default_names(n)), &table, &gens)
    }

    /// Loads either a table file or a permutation file.
    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| GroupError::Format(e.to_string()))?;
        if value.get("table").is_some() {
            let file: TableFile = serde_json::from_value(value).map_err(|e| GroupError::Format(e.to_string()))?;
            let gens: Vec<(String, Element)> = file.generators.into_iter().collect();
            Self::from_named_table(file.name.as_deref().unwrap_or("G"), file.elements, &file.table, &gens)
        } else if value.get("points").is_some() {
            let file: PermutationFile = serde_json::from_value(value).map_err(|e| GroupError::Format(e.to_string()))?;
            let gens: Vec<(String, Vec<usize>)> = file.generators.into_iter().collect();
            Self::from_named_permutations(file.name.as_deref().unwrap_or("G"), file.points, &gens)
        } else {
            Err(GroupError::Format("expected a \"table\" or a \"points\" field".into()))
        }
    }

    /// Serializes in the table-file format.
    pub fn to_json(&self) -> String {
        let n = self.order();
        let file = TableFile {
            name: Some(self.name.clone()),
            elements: Some(self.names.clone()),
            table: (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect(),
            generators: self.gens.letters().iter().map(|l| (l.name.clone(), l.image)).collect(),
        };
        serde_json::to_string_pretty(&file).expect("group file serializes")
    }

    fn closure_of_generators(&self) -> Vec<bool> {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[IDENTITY] = true;
        let mut queue = VecDeque::from([IDENTITY]);
        while let Some(a) = queue.pop_front() {
            for l in self.gens.letters() {
                for b in [self.mul(a, l.image), self.mul(a, self.inv(l.image))] {
                    if !seen[b] {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        seen
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.inv.len()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order()
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mul[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inv[a]
    }

    pub fn element_name(&self, a: Element) -> &str {
        &self.names[a]
    }

    pub fn element_by_name(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name)
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    /// `Y = X ∪ Ḡ`: the plain letters followed by `@<name>` for every element.
    pub fn extend_generators(&self) -> GeneratorSet {
        let mut letters = self.gens.letters.clone();
        let plain_count = letters.len();
        let mut barred = Vec::with_capacity(self.order());
        for g in self.elements() {
            barred.push(letters.len());
            letters.push(Letter {
                name: format!("{BAR_PREFIX}{}", self.names[g]),
                image: g,
                flavor: LetterFlavor::Barred,
            });
        }
        let lookup = letters.iter().enumerate().map(|(i, l)| (l.name.clone(), i)).collect();
        GeneratorSet { kind: GeneratorKind::Extended, letters, lookup, barred, plain_count }
    }

    /// Image of a signed letter.
    #[inline]
    pub fn symbol_value(&self, gens: &GeneratorSet, s: Symbol) -> Element {
        let g = gens.image(s.letter);
        if s.inverse {
            self.inv(g)
        } else {
            g
        }
    }

    /// Value `[w]_G` of a word: the left-to-right product of letter images.
    pub fn eval_word(&self, gens: &GeneratorSet, w: &Word) -> Result<Element, GroupError> {
        w.symbols().iter().try_fold(IDENTITY, |acc, s| {
            if s.letter >= gens.len() {
                return Err(GroupError::UnknownLetter(format!("#{}", s.letter)));
            }
            Ok(self.mul(acc, self.symbol_value(gens, *s)))
        })
    }

    /// A shortest word over the plain generators for every element,
    /// preferring earlier letters and positive exponents.
    pub fn shortest_words(&self) -> Vec<Word> {
        let n = self.order();
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[IDENTITY] = Some(Word::empty());
        let mut queue = VecDeque::from([IDENTITY]);
        while let Some(a) = queue.pop_front() {
            let base = words[a].clone().expect("queued elements have words");
            for l in 0..self.gens.len() {
                for s in [Symbol::pos(l), Symbol::neg(l)] {
                    let b = self.mul(a, self.symbol_value(&self.gens, s));
                    if words[b].is_none() {
                        let mut w = base.clone();
                        w.push(s);
                        words[b] = Some(w);
                        queue.push_back(b);
                    }
                }
            }
        }
        words.into_iter().map(|w| w.expect("generators generate the group")).collect()
    }
}
