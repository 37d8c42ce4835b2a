//! Stabilizations, elementary automorphisms and tame isomorphisms of a DGA,
//! with the height conditions that make them compatible with the filtration.

use crate::algebra::{AlgebraError, Dga, Element, GenId, Generator, HeightAssignment};
use crate::augment::{AugmentError, Augmentation};
use crate::gf2::{Chain, Gf2Matrix};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("stabilization needs 0 < h_bot < h_top, got h_top = {h_top}, h_bot = {h_bot}")]
    StabilizationHeights { h_top: String, h_bot: String },
    #[error("addend mentions the target generator {0}")]
    AddendMentionsTarget(GenId),
    #[error("addend word has grading {found}, target generator has grading {expected}")]
    InhomogeneousAddend { expected: i64, found: i64 },
    #[error("relabeling is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Augment(#[from] AugmentError),
}

/// `q_target ↦ q_target + addend`, identity on the other generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryAutomorphism {
    target: GenId,
    addend: Element,
}

impl ElementaryAutomorphism {
    pub fn new(target: GenId, addend: Element) -> Result<Self, TransformError> {
        if addend.mentions(target) {
            return Err(TransformError::AddendMentionsTarget(target));
        }
        Ok(ElementaryAutomorphism { target, addend })
    }

    pub fn target(&self) -> GenId {
        self.target
    }

    pub fn addend(&self) -> &Element {
        &self.addend
    }

    /// The automorphism as a substitution of generators.
    fn image(&self, id: GenId) -> Element {
        let mut e = Element::generator(id);
        if id == self.target {
            e += &self.addend;
        }
        e
    }

    fn check_against(&self, dga: &Dga) -> Result<(), TransformError> {
        let expected = dga.grading(self.target)?;
        for word in self.addend.words() {
            let found = dga.word_grading(word)?;
            if found != expected {
                return Err(TransformError::InhomogeneousAddend { expected, found });
            }
        }
        Ok(())
    }
}

/// Adds generators `e_k`, `e_{k-1}` with `∂e_k = e_{k-1}` and heights
/// `h_top > h_bot`, appended after the existing generators.
pub fn stabilize(
    dga: &Dga,
    k: i64,
    h_top: Rational,
    h_bot: Rational,
    heights: &HeightAssignment,
) -> Result<(Dga, HeightAssignment), TransformError> {
    if !(h_top > h_bot && h_bot > Rational::from_integer(0.into())) {
        return Err(TransformError::StabilizationHeights {
            h_top: format_rational(&h_top),
            h_bot: format_rational(&h_bot),
        });
    }
    let fresh = |base: String| {
        let mut name = base;
        while dga.id_of(&name).is_some() {
            name.push('\'');
        }
        name
    };
    let top_name = fresh(format!("e{k}"));
    let mut bot_name = fresh(format!("e{}", k - 1));
    while bot_name == top_name {
        bot_name.push('\'');
    }

    let n = dga.len();
    let mut generators = dga.generators().to_vec();
    generators.push(Generator { id: n, name: top_name, grading: k });
    generators.push(Generator { id: n + 1, name: bot_name, grading: k - 1 });
    let mut differential = dga.differentials().to_vec();
    differential.push(Element::generator(n + 1));
    differential.push(Element::zero());

    let mut h = heights.clone();
    h.insert(n, h_top)?;
    h.insert(n + 1, h_bot)?;
    Ok((Dga::new(generators, differential)?, h))
}

/// Conjugates the differential by `φ`: `∂' = φ∘∂∘φ⁻¹`, with `φ⁻¹ = φ` over Z2.
pub fn apply_elementary(dga: &Dga, phi: &ElementaryAutomorphism) -> Result<Dga, TransformError> {
    phi.check_against(dga)?;
    let mut differential = Vec::with_capacity(dga.len());
    for g in dga.generators() {
        let pre = dga.apply_differential(&phi.image(g.id))?;
        differential.push(pre.substitute(|id| phi.image(id)));
    }
    Ok(Dga::new(dga.generators().to_vec(), differential)?)
}

/// Every letter of every word of the addend sits strictly below the target.
pub fn is_semimonotonic(phi: &ElementaryAutomorphism, heights: &HeightAssignment) -> Result<bool, AlgebraError> {
    let top = heights.get(phi.target)?;
    for word in phi.addend.words() {
        for &id in word.letters() {
            if heights.get(id)? >= top {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The map `φ₁^ε` on the generator span: the target goes to itself plus, for
/// each addend word `x1…xk`, the sum `Σ_l (Π_{m≠l} ε(xm)) x_l`; every other
/// generator is fixed. Column `j` is the image of generator `j`.
pub fn induced_linear_map(phi: &ElementaryAutomorphism, eps: &Augmentation) -> Result<Gf2Matrix, TransformError> {
    let n = eps.len();
    if phi.target >= n {
        return Err(AlgebraError::UnknownGenerator(phi.target).into());
    }
    let mut correction = Chain::new();
    for word in phi.addend.words() {
        let letters = word.letters();
        if let Some(&bad) = letters.iter().find(|&&id| id >= n) {
            return Err(AlgebraError::UnknownGenerator(bad).into());
        }
        for (l, &x) in letters.iter().enumerate() {
            let coefficient = letters.iter().enumerate().all(|(m, &y)| m == l || eps.value(y));
            if coefficient {
                correction.toggle(x);
            }
        }
    }
    let mut cols: Vec<Chain> = (0..n).map(Chain::single).collect();
    cols[phi.target].add_assign(&correction);
    Ok(Gf2Matrix::from_columns(n, cols))
}

/// A composition of elementary automorphisms followed by a relabeling of
/// generators. The steps are kept separate because semimonotonicity is a
/// per-step condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TameIsomorphism {
    steps: Vec<ElementaryAutomorphism>,
    relabel: Vec<GenId>,
}

impl TameIsomorphism {
    /// `relabel[old] = new` must be a permutation.
    pub fn new(steps: Vec<ElementaryAutomorphism>, relabel: Vec<GenId>) -> Result<Self, TransformError> {
        let n = relabel.len();
        let mut seen = vec![false; n];
        for &r in &relabel {
            if r >= n || std::mem::replace(&mut seen[r], true) {
                return Err(TransformError::NotAPermutation(n));
            }
        }
        Ok(TameIsomorphism { steps, relabel })
    }

    pub fn steps(&self) -> &[ElementaryAutomorphism] {
        &self.steps
    }

    pub fn relabel(&self) -> &[GenId] {
        &self.relabel
    }

    /// Applies each step in order, then moves generator `old` to position
    /// `relabel[old]`, keeping its name and grading.
    pub fn apply(&self, dga: &Dga) -> Result<Dga, TransformError> {
        if self.relabel.len() != dga.len() {
            return Err(TransformError::NotAPermutation(dga.len()));
        }
        let mut current = dga.clone();
        for step in &self.steps {
            current = apply_elementary(&current, step)?;
        }
        let n = current.len();
        let mut generators = vec![None; n];
        let mut differential = vec![Element::zero(); n];
        for g in current.generators() {
            let new = self.relabel[g.id];
            generators[new] = Some(Generator { id: new, name: g.name.clone(), grading: g.grading });
            differential[new] = current.differential(g.id)?.substitute(|id| Element::generator(self.relabel[id]));
        }
        let generators = generators.into_iter().map(|g| g.expect("relabel is a permutation")).collect();
        Ok(Dga::new(generators, differential)?)
    }

    pub fn is_semimonotonic(&self, heights: &HeightAssignment) -> Result<bool, AlgebraError> {
        for step in &self.steps {
            if !is_semimonotonic(step, heights)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{DgaBuilder, Word};
    use crate::augment::enumerate_augmentations;
    use crate::rational::int;

    fn trefoil() -> Dga {
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
        b.differential("q", &[&[], &[]]).unwrap();
        b.build().unwrap()
    }

    /// Generators a, b, c of grading 0 plus one generator t of grading 1 with
    /// `∂t = a + b c`, so that `a ↦ a + εc b + εb c` has a visible effect.
    fn triangle() -> Dga {
        let mut b = DgaBuilder::new();
        for (n, g) in [("a", 0), ("b", 0), ("c", 0), ("t", 1)] {
            b.generator(n, g).unwrap();
        }
        b.differential("t", &[&["a"], &["b", "c"]]).unwrap();
        b.build().unwrap()
    }

    fn riiib_map() -> ElementaryAutomorphism {
        let addend: Element = [Word::letter(1), Word::letter(2)].into_iter().collect();
        ElementaryAutomorphism::new(0, addend).unwrap()
    }

    #[test]
    fn stabilize_unknot() {
        let u = unknot();
        let h = HeightAssignment::from_values([int(1)]).unwrap();
        let (s, hs) = stabilize(&u, 2, int(3), int(2), &h).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.name(1).unwrap(), "e2");
        assert_eq!(s.name(2).unwrap(), "e1");
        assert_eq!(s.differential(1).unwrap(), &Element::generator(2));
        assert!(s.differential(2).unwrap().is_zero());
        assert_eq!(hs.get(1).unwrap(), &int(3));
        assert!(s.validate().is_valid());
    }

    #[test]
    fn stabilized_trefoil_validates() {
        let t = trefoil();
        let h = HeightAssignment::from_values([4, 4, 1, 1, 1].map(int)).unwrap();
        let (s, _) = stabilize(&t, 0, int(3), int(2), &h).unwrap();
        assert_eq!(s.len(), t.len() + 2);
        assert!(s.validate().is_valid());
    }

    #[test]
    fn stabilize_rejects_bad_heights() {
        let h = HeightAssignment::from_values([int(1)]).unwrap();
        assert!(stabilize(&unknot(), 1, int(2), int(2), &h).is_err());
        assert!(stabilize(&unknot(), 1, int(1), int(2), &h).is_err());
        assert!(stabilize(&unknot(), 1, int(1), int(0), &h).is_err());
    }

    #[test]
    fn stabilize_avoids_name_clashes() {
        let mut b = DgaBuilder::new();
        b.generator("e1", 1).unwrap();
        let d = b.build().unwrap();
        let h = HeightAssignment::from_values([int(1)]).unwrap();
        let (s, _) = stabilize(&d, 1, int(2), int(1), &h).unwrap();
        assert_eq!(s.name(1).unwrap(), "e1'");
        assert_eq!(s.name(2).unwrap(), "e0");
    }

    #[test]
    fn identity_automorphism_changes_nothing() {
        let t = trefoil();
        let phi = ElementaryAutomorphism::new(0, Element::zero()).unwrap();
        assert_eq!(apply_elementary(&t, &phi).unwrap(), t);
    }

    #[test]
    fn trefoil_q1_plus_q2() {
        let t = trefoil();
        let phi = ElementaryAutomorphism::new(0, Element::generator(1)).unwrap();
        let out = apply_elementary(&t, &phi).unwrap();
        // Conjugation gives ∂q1 + ∂q2; over the noncommutative algebra the two
        // length-three words survive.
        let expected: Element = [Word::new(vec![4, 3, 2]), Word::new(vec![2, 3, 4])].into_iter().collect();
        assert_eq!(out.differential(0).unwrap(), &expected);
        assert_eq!(out.differential(1).unwrap(), t.differential(1).unwrap());
        assert!(out.validate().is_valid());
    }

    #[test]
    fn automorphisms_are_involutions() {
        let t = trefoil();
        let phi = ElementaryAutomorphism::new(2, Element::from_word(Word::new(vec![3, 4])) + Element::generator(4)).unwrap();
        let once = apply_elementary(&t, &phi).unwrap();
        assert_ne!(once, t);
        assert!(once.validate().is_valid());
        assert_eq!(apply_elementary(&once, &phi).unwrap(), t);
    }

    #[test]
    fn inhomogeneous_addend_rejected() {
        let t = trefoil();
        let phi = ElementaryAutomorphism::new(0, Element::generator(2)).unwrap();
        assert_eq!(
            apply_elementary(&t, &phi),
            Err(TransformError::InhomogeneousAddend { expected: 1, found: 0 })
        );
        assert_eq!(
            ElementaryAutomorphism::new(0, Element::from_word(Word::new(vec![2, 0]))),
            Err(TransformError::AddendMentionsTarget(0))
        );
    }

    #[test]
    fn semimonotonic_examples() {
        let phi = riiib_map();
        let h = HeightAssignment::from_values([3, 1, 1, 5].map(int)).unwrap();
        assert!(is_semimonotonic(&phi, &h).unwrap());
        let high = HeightAssignment::from_values([3, 4, 1, 5].map(int)).unwrap();
        assert!(!is_semimonotonic(&phi, &high).unwrap());
        let trivial = ElementaryAutomorphism::new(0, Element::zero()).unwrap();
        assert!(is_semimonotonic(&trivial, &high).unwrap());
    }

    #[test]
    fn semimonotonic_is_letter_level() {
        // Addend word b·c has height 2 < h(a) = 3 but c itself is at 3.
        let phi = ElementaryAutomorphism::new(0, Element::from_word(Word::new(vec![1, 2]))).unwrap();
        let h = HeightAssignment::from_values([3, 1, 3, 9].map(int)).unwrap();
        assert!(!is_semimonotonic(&phi, &h).unwrap());
    }

    #[test]
    fn induced_map_examples() {
        let d = triangle();
        let augs = enumerate_augmentations(&d).unwrap();
        let find = |vals: [bool; 4]| augs.iter().find(|a| a.values() == vals).unwrap().clone();
        // ∂t = a + bc forces ε(a) = ε(b)ε(c).
        let zero = find([false, false, false, false]);
        let only_c = find([false, false, true, false]);

        // Single letters pass through unchanged: a ↦ a + b + c.
        let m = induced_linear_map(&riiib_map(), &zero).unwrap();
        assert_eq!(m.column(0).indices(), &[0, 1, 2]);
        assert_eq!(m.column(1), &Chain::single(1));

        // a ↦ a + bc gives a ↦ a + ε(c)b + ε(b)c.
        let bc = ElementaryAutomorphism::new(0, Element::from_word(Word::new(vec![1, 2]))).unwrap();
        assert_eq!(induced_linear_map(&bc, &zero).unwrap(), Gf2Matrix::identity(4));
        let m = induced_linear_map(&bc, &only_c).unwrap();
        assert_eq!(m.column(0).indices(), &[0, 1]);
    }

    #[test]
    fn induced_map_is_involution() {
        let d = triangle();
        let bc = ElementaryAutomorphism::new(0, Element::from_word(Word::new(vec![1, 2]))).unwrap();
        for eps in enumerate_augmentations(&d).unwrap() {
            let m = induced_linear_map(&bc, &eps).unwrap();
            assert_eq!(m.mul(&m), Gf2Matrix::identity(4));
        }
    }

    #[test]
    fn tame_isomorphism_relabels() {
        let t = trefoil();
        // Swap q1 and q2 and swap q3 and q5: the trefoil is symmetric under this.
        let iso = TameIsomorphism::new(vec![], vec![1, 0, 4, 3, 2]).unwrap();
        let out = iso.apply(&t).unwrap();
        assert!(out.validate().is_valid());
        assert_eq!(out.name(0).unwrap(), "q2");
        assert_eq!(out.display_element(out.differential(0).unwrap()), "1 + q5 + q3 + q3q4q5");
        assert!(TameIsomorphism::new(vec![], vec![0, 0]).is_err());
    }

    #[test]
    fn tame_isomorphism_semimonotonic_per_step() {
        let h = HeightAssignment::from_values([3, 1, 1, 5].map(int)).unwrap();
        let ok = TameIsomorphism::new(vec![riiib_map()], vec![0, 1, 2, 3]).unwrap();
        assert!(ok.is_semimonotonic(&h).unwrap());
        let up = ElementaryAutomorphism::new(1, Element::generator(0)).unwrap();
        let bad = TameIsomorphism::new(vec![riiib_map(), up], vec![0, 1, 2, 3]).unwrap();
        assert!(!bad.is_semimonotonic(&h).unwrap());
    }
}
