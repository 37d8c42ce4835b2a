//! The free noncommutative algebra over Z2 on a finite set of graded generators,
//! together with the differential of a Chekanov-Eliashberg DGA and the height
//! filtration on it.
//!
//! Words are stored as sequences of generator ids; names only matter at the I/O
//! boundary. An [`Element`] is a set of words, which is exactly a Z2 linear
//! combination: inserting a word twice removes it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_traits::{Signed, Zero};

use crate::rational::{Extended, Rational};

pub type GenId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("unknown generator id {0}")]
    UnknownGenerator(GenId),
    #[error("unknown generator name `{0}`")]
    UnknownName(String),
    #[error("generator at position {position} has id {id}; ids must be contiguous from 0")]
    NonContiguousId { position: usize, id: GenId },
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("differential given for {found} generators but the DGA has {expected}")]
    DifferentialArity { expected: usize, found: usize },
    #[error("no height assigned to generator {0}")]
    MissingHeight(GenId),
    #[error("height of generator {id} must be positive, got {value}")]
    NonPositiveHeight { id: GenId, value: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: GenId,
    pub name: String,
    /// Maslov grading.
    pub grading: i64,
}

/// A monomial in the free algebra. The empty word is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<GenId>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(id: GenId) -> Self {
        Word(vec![id])
    }

    pub fn new(letters: Vec<GenId>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[GenId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: GenId) -> bool {
        self.0.contains(&id)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl FromIterator<GenId> for Word {
    fn from_iter<T: IntoIterator<Item = GenId>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A Z2 linear combination of words.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(BTreeSet<Word>);

impl Element {
    pub fn zero() -> Self {
        Element(BTreeSet::new())
    }

    pub fn one() -> Self {
        Element::from_word(Word::unit())
    }

    pub fn generator(id: GenId) -> Self {
        Element::from_word(Word::letter(id))
    }

    pub fn from_word(word: Word) -> Self {
        Element(BTreeSet::from([word]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of words with coefficient 1.
    pub fn num_words(&self) -> usize {
        self.0.len()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> + '_ {
        self.0.iter()
    }

    pub fn contains_word(&self, word: &Word) -> bool {
        self.0.contains(word)
    }

    /// Adds a single word mod 2.
    pub fn toggle(&mut self, word: Word) {
        if !self.0.remove(&word) {
            self.0.insert(word);
        }
    }

    /// True if some word uses generator `id`.
    pub fn mentions(&self, id: GenId) -> bool {
        self.0.iter().any(|w| w.contains(id))
    }

    /// Applies the algebra homomorphism sending each generator to `image(id)`.
    pub fn substitute(&self, image: impl Fn(GenId) -> Element) -> Element {
        let mut cache: HashMap<GenId, Element> = HashMap::new();
        let mut out = Element::zero();
        for word in &self.0 {
            let mut product = Element::one();
            for &id in word.letters() {
                let img = cache.entry(id).or_insert_with(|| image(id));
                product = &product * &*img;
                if product.is_zero() {
                    break;
                }
            }
            out += product;
        }
        out
    }

    /// The part spanned by words of length exactly one, as generator ids.
    pub fn linear_part(&self) -> Vec<GenId> {
        self.0
            .iter()
            .filter(|w| w.len() == 1)
            .map(|w| w.letters()[0])
            .collect()
    }
}

impl FromIterator<Word> for Element {
    fn from_iter<T: IntoIterator<Item = Word>>(iter: T) -> Self {
        let mut e = Element::zero();
        for w in iter {
            e.toggle(w);
        }
        e
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for w in &rhs.0 {
            self.toggle(w.clone());
        }
    }
}

impl AddAssign for Element {
    fn add_assign(&mut self, rhs: Element) {
        for w in rhs.0 {
            self.toggle(w);
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self += rhs;
        self
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        let mut out = Element::zero();
        for a in &self.0 {
            for b in &rhs.0 {
                out.toggle(a.concat(b));
            }
        }
        out
    }
}

/// One way a DGA can fail to be a differential graded algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A word of `∂q` does not have grading `|q| - 1`.
    GradingDrop { generator: GenId, word: Word, expected: i64, found: i64 },
    /// `∂∂q` is nonzero.
    SquareNonZero { generator: GenId, residue: Element },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A free Z2 algebra with a differential given on generators.
///
/// Construction only checks structure (ids, names, letters in range). Whether
/// the differential really has degree −1 and squares to zero is reported by
/// [`Dga::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dga {
    generators: Vec<Generator>,
    differential: Vec<Element>,
    by_name: HashMap<String, GenId>,
}

impl Dga {
    pub fn new(generators: Vec<Generator>, differential: Vec<Element>) -> Result<Self, AlgebraError> {
        let mut by_name = HashMap::with_capacity(generators.len());
        for (position, g) in generators.iter().enumerate() {
            if g.id != position {
                return Err(AlgebraError::NonContiguousId { position, id: g.id });
            }
            if by_name.insert(g.name.clone(), g.id).is_some() {
                return Err(AlgebraError::DuplicateName(g.name.clone()));
            }
        }
        if differential.len() != generators.len() {
            return Err(AlgebraError::DifferentialArity {
                expected: generators.len(),
                found: differential.len(),
            });
        }
        let n = generators.len();
        for e in &differential {
            for w in e.words() {
                if let Some(&bad) = w.letters().iter().find(|&&id| id >= n) {
                    return Err(AlgebraError::UnknownGenerator(bad));
                }
            }
        }
        Ok(Dga { generators, differential, by_name })
    }

    /// The DGA with no generators.
    pub fn empty() -> Self {
        Dga { generators: Vec::new(), differential: Vec::new(), by_name: HashMap::new() }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, id: GenId) -> Result<&Generator, AlgebraError> {
        self.generators.get(id).ok_or(AlgebraError::UnknownGenerator(id))
    }

    pub fn grading(&self, id: GenId) -> Result<i64, AlgebraError> {
        self.generator(id).map(|g| g.grading)
    }

    pub fn name(&self, id: GenId) -> Result<&str, AlgebraError> {
        self.generator(id).map(|g| g.name.as_str())
    }

    pub fn id_of(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn gradings(&self) -> Vec<i64> {
        self.generators.iter().map(|g| g.grading).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn differential(&self, id: GenId) -> Result<&Element, AlgebraError> {
        self.differential.get(id).ok_or(AlgebraError::UnknownGenerator(id))
    }

    pub fn differentials(&self) -> &[Element] {
        &self.differential
    }

    /// Sum of the gradings of the letters; the unit word has grading 0.
    pub fn word_grading(&self, word: &Word) -> Result<i64, AlgebraError> {
        word.letters().iter().map(|&id| self.grading(id)).sum()
    }

    fn check_element(&self, elem: &Element) -> Result<(), AlgebraError> {
        for w in elem.words() {
            for &id in w.letters() {
                self.generator(id)?;
            }
        }
        Ok(())
    }

    /// Extends the differential to all of the algebra by the Leibniz rule.
    ///
    /// Over Z2 no signs appear: `∂(xy) = ∂(x)y + x∂(y)`.
    pub fn apply_differential(&self, elem: &Element) -> Result<Element, AlgebraError> {
        self.check_element(elem)?;
        let mut out = Element::zero();
        for word in elem.words() {
            let letters = word.letters();
            for (pos, &id) in letters.iter().enumerate() {
                let prefix = Word::new(letters[..pos].to_vec());
                let suffix = Word::new(letters[pos + 1..].to_vec());
                for middle in self.differential[id].words() {
                    out.toggle(prefix.concat(middle).concat(&suffix));
                }
            }
        }
        Ok(out)
    }

    /// Checks that every `∂q` is homogeneous of degree `|q| - 1` and that `∂∂q = 0`.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for g in &self.generators {
            let dq = &self.differential[g.id];
            for word in dq.words() {
                let found = self.word_grading(word).expect("letters checked at construction");
                if found != g.grading - 1 {
                    violations.push(Violation::GradingDrop {
                        generator: g.id,
                        word: word.clone(),
                        expected: g.grading - 1,
                        found,
                    });
                }
            }
            let ddq = self.apply_differential(dq).expect("letters checked at construction");
            if !ddq.is_zero() {
                violations.push(Violation::SquareNonZero { generator: g.id, residue: ddq });
            }
        }
        ValidationReport { violations }
    }

    /// Writes a word as concatenated generator names; the unit is `1`.
    pub fn display_word(&self, word: &Word) -> String {
        if word.is_unit() {
            return "1".to_string();
        }
        word.letters()
            .iter()
            .map(|&id| self.generators.get(id).map_or("?", |g| g.name.as_str()))
            .collect()
    }

    pub fn display_element(&self, elem: &Element) -> String {
        if elem.is_zero() {
            return "0".to_string();
        }
        elem.words().map(|w| self.display_word(w)).collect::<Vec<_>>().join(" + ")
    }
}

/// Incremental construction of a [`Dga`] by generator name.
#[derive(Debug, Default)]
pub struct DgaBuilder {
    generators: Vec<Generator>,
    differential: Vec<Element>,
    by_name: HashMap<String, GenId>,
}

impl DgaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn generator(&mut self, name: &str, grading: i64) -> Result<GenId, AlgebraError> {
        if self.by_name.contains_key(name) {
            return Err(AlgebraError::DuplicateName(name.to_string()));
        }
        let id = self.generators.len();
        self.generators.push(Generator { id, name: name.to_string(), grading });
        self.differential.push(Element::zero());
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn word(&self, names: &[&str]) -> Result<Word, AlgebraError> {
        names
            .iter()
            .map(|n| self.by_name.get(*n).copied().ok_or_else(|| AlgebraError::UnknownName(n.to_string())))
            .collect()
    }

    /// Sets `∂(name)` to the Z2 sum of the given words.
    pub fn differential(&mut self, name: &str, words: &[&[&str]]) -> Result<&mut Self, AlgebraError> {
        let id = *self.by_name.get(name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))?;
        let elem = words.iter().map(|w| self.word(w)).collect::<Result<Element, _>>()?;
        self.differential[id] = elem;
        Ok(self)
    }

    pub fn build(self) -> Result<Dga, AlgebraError> {
        Dga::new(self.generators, self.differential)
    }
}

/// Heights of generators: the filtration datum.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HeightAssignment(BTreeMap<GenId, Rational>);

impl HeightAssignment {
    pub fn new(heights: BTreeMap<GenId, Rational>) -> Result<Self, AlgebraError> {
        for (&id, value) in &heights {
            if !value.is_positive() {
                return Err(AlgebraError::NonPositiveHeight { id, value: value.clone() });
            }
        }
        Ok(HeightAssignment(heights))
    }

    /// Heights for generators `0..values.len()` in order.
    pub fn from_values(values: impl IntoIterator<Item = Rational>) -> Result<Self, AlgebraError> {
        HeightAssignment::new(values.into_iter().enumerate().collect())
    }

    pub fn get(&self, id: GenId) -> Result<&Rational, AlgebraError> {
        self.0.get(&id).ok_or(AlgebraError::MissingHeight(id))
    }

    pub fn insert(&mut self, id: GenId, value: Rational) -> Result<(), AlgebraError> {
        if !value.is_positive() {
            return Err(AlgebraError::NonPositiveHeight { id, value });
        }
        self.0.insert(id, value);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (GenId, &Rational)> + '_ {
        self.0.iter().map(|(&id, h)| (id, h))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True if every generator of `dga` has a height.
    pub fn covers(&self, dga: &Dga) -> bool {
        (0..dga.len()).all(|id| self.0.contains_key(&id))
    }

    /// Heights add along a word; the unit has height 0.
    pub fn of_word(&self, word: &Word) -> Result<Rational, AlgebraError> {
        let mut total = Rational::zero();
        for &id in word.letters() {
            total += self.get(id)?;
        }
        Ok(total)
    }

    /// Maximum word height; the zero element has height −∞.
    pub fn of_element(&self, elem: &Element) -> Result<Extended, AlgebraError> {
        let mut best = Extended::NegInfinity;
        for w in elem.words() {
            best = best.max(Extended::Finite(self.of_word(w)?));
        }
        Ok(best)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|id| format!("g{id}")).collect();
        f.write_str(&parts.join("·"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn trefoil() -> Dga {
        let mut b = DgaBuilder::new();
        for (n, g) in [("q1", 1), ("q2", 1), ("q3", 0), ("q4", 0), ("q5", 0)] {
            b.generator(n, g).unwrap();
        }
        b.differential("q1", &[&[], &["q5"], &["q5", "q4", "q3"], &["q3"]]).unwrap();
        b.differential("q2", &[&[], &["q3"], &["q3", "q4", "q5"], &["q5"]]).unwrap();
        b.build().unwrap()
    }

    fn unknot() -> Dga {
        let mut b = DgaBuilder::new();
        b.generator("q", 1).unwrap();
        b.differential("q", &[&[]]).unwrap();
        b.build().unwrap()
    }

    fn w(ids: &[GenId]) -> Word {
        Word::new(ids.to_vec())
    }

    #[test]
    fn word_grading_examples() {
        let t = trefoil();
        assert_eq!(t.word_grading(&Word::unit()).unwrap(), 0);
        assert_eq!(t.word_grading(&w(&[4, 3, 2])).unwrap(), 0);
        assert_eq!(t.word_grading(&w(&[0, 2])).unwrap(), 1);
        assert_eq!(t.word_grading(&w(&[7])), Err(AlgebraError::UnknownGenerator(7)));
    }

    #[test]
    fn height_examples() {
        let h = HeightAssignment::from_values([4, 4, 1, 1, 1].map(int)).unwrap();
        assert_eq!(h.of_word(&w(&[0, 1])).unwrap(), int(8));
        let e: Element = [w(&[2]), w(&[4])].into_iter().collect();
        assert_eq!(h.of_element(&e).unwrap(), Extended::Finite(int(1)));
        assert_eq!(h.of_element(&Element::zero()).unwrap(), Extended::NegInfinity);
        assert_eq!(h.of_element(&Element::one()).unwrap(), Extended::Finite(int(0)));
        assert_eq!(h.of_word(&w(&[9])), Err(AlgebraError::MissingHeight(9)));
    }

    #[test]
    fn heights_must_be_positive() {
        assert!(HeightAssignment::from_values([int(1), int(0)]).is_err());
        assert!(HeightAssignment::from_values([int(-2)]).is_err());
    }

    #[test]
    fn differential_of_trefoil_q1() {
        let t = trefoil();
        let d = t.apply_differential(&Element::generator(0)).unwrap();
        let expected: Element = [Word::unit(), w(&[4]), w(&[4, 3, 2]), w(&[2])].into_iter().collect();
        assert_eq!(d, expected);
        assert_eq!(t.display_element(&d), "1 + q3 + q5 + q5q4q3");
    }

    #[test]
    fn differential_kills_unit_and_cycles() {
        let t = trefoil();
        assert!(t.apply_differential(&Element::one()).unwrap().is_zero());
        assert!(t.apply_differential(&Element::from_word(w(&[2, 3]))).unwrap().is_zero());
    }

    #[test]
    fn leibniz_on_a_product() {
        // ∂(q1 q3) = ∂(q1) q3 since ∂q3 = 0.
        let t = trefoil();
        let d = t.apply_differential(&Element::from_word(w(&[0, 2]))).unwrap();
        let expected: Element = [w(&[2]), w(&[4, 2]), w(&[4, 3, 2, 2]), w(&[2, 2])].into_iter().collect();
        assert_eq!(d, expected);
    }

    #[test]
    fn corpus_dgas_validate() {
        assert!(unknot().validate().is_valid());
        assert!(trefoil().validate().is_valid());
    }

    #[test]
    fn grading_violation_reported() {
        let mut b = DgaBuilder::new();
        b.generator("q", 1).unwrap();
        b.differential("q", &[&["q"]]).unwrap();
        let report = b.build().unwrap().validate();
        assert!(matches!(
            report.violations.first(),
            Some(Violation::GradingDrop { generator: 0, expected: 0, found: 1, .. })
        ));
    }

    #[test]
    fn square_nonzero_reported() {
        // ∂a = b, ∂b = 1: gradings fine but ∂∂a = 1.
        let mut b = DgaBuilder::new();
        b.generator("a", 2).unwrap();
        b.generator("b", 1).unwrap();
        b.differential("a", &[&["b"]]).unwrap();
        b.differential("b", &[&[]]).unwrap();
        let report = b.build().unwrap().validate();
        assert_eq!(
            report.violations,
            vec![Violation::SquareNonZero { generator: 0, residue: Element::one() }]
        );
    }

    #[test]
    fn structural_errors() {
        let g = |id, name: &str| Generator { id, name: name.into(), grading: 0 };
        assert_eq!(
            Dga::new(vec![g(1, "a")], vec![Element::zero()]),
            Err(AlgebraError::NonContiguousId { position: 0, id: 1 })
        );
        assert_eq!(
            Dga::new(vec![g(0, "a"), g(1, "a")], vec![Element::zero(); 2]),
            Err(AlgebraError::DuplicateName("a".into()))
        );
        assert_eq!(
            Dga::new(vec![g(0, "a")], vec![Element::generator(3)]),
            Err(AlgebraError::UnknownGenerator(3))
        );
        assert!(matches!(
            Dga::new(vec![g(0, "a")], vec![]),
            Err(AlgebraError::DifferentialArity { expected: 1, found: 0 })
        ));
    }

    #[test]
    fn zero_and_unit_are_distinct() {
        assert_ne!(Element::zero(), Element::one());
        assert!(Element::zero().is_zero());
    }

    #[test]
    fn substitution_is_multiplicative() {
        // q3 -> q3 + 1 applied to q3 q3 gives q3q3 + q3 + q3 + 1 = q3q3 + 1.
        let e = Element::from_word(w(&[2, 2]));
        let out = e.substitute(|id| if id == 2 { Element::generator(2) + Element::one() } else { Element::generator(id) });
        let expected: Element = [w(&[2, 2]), Word::unit()].into_iter().collect();
        assert_eq!(out, expected);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word_strategy() -> impl Strategy<Value = Word> {
            proptest::collection::vec(0usize..5, 0..4).prop_map(Word::new)
        }

        fn element_strategy() -> impl Strategy<Value = Element> {
            proptest::collection::vec(word_strategy(), 0..5).prop_map(|ws| ws.into_iter().collect())
        }

        proptest! {
            #[test]
            fn d_squared_vanishes_on_trefoil(e in element_strategy()) {
                let t = trefoil();
                let d = t.apply_differential(&e).unwrap();
                prop_assert!(t.apply_differential(&d).unwrap().is_zero());
            }

            #[test]
            fn grading_is_additive(a in word_strategy(), b in word_strategy()) {
                let t = trefoil();
                prop_assert_eq!(
                    t.word_grading(&a.concat(&b)).unwrap(),
                    t.word_grading(&a).unwrap() + t.word_grading(&b).unwrap()
                );
            }

            #[test]
            fn heights_add_and_max(a in word_strategy(), b in word_strategy(),
                                    hs in proptest::collection::vec(1i64..20, 5)) {
                let h = HeightAssignment::from_values(hs.into_iter().map(int)).unwrap();
                prop_assert_eq!(h.of_word(&a.concat(&b)).unwrap(), h.of_word(&a).unwrap() + h.of_word(&b).unwrap());
                let ea = Element::from_word(a.clone());
                let eb = Element::from_word(b.clone());
                let sum = h.of_element(&(&ea + &eb)).unwrap();
                let bound = h.of_element(&ea).unwrap().max(h.of_element(&eb).unwrap());
                prop_assert!(sum <= bound);
                if a != b {
                    prop_assert_eq!(sum, bound);
                }
            }

            #[test]
            fn addition_is_a_z2_group(a in element_strategy(), b in element_strategy(), c in element_strategy()) {
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert!((&a + &a).is_zero());
                prop_assert_eq!(&a + &Element::zero(), a.clone());
            }
        }
    }
}
