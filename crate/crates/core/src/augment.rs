//! Augmentations of a DGA and the linearized complex they produce.

use std::fmt;

use crate::algebra::{AlgebraError, Dga, Element, GenId};
use crate::gf2::{Chain, Gf2Matrix};

/// Enumeration is exact brute force over the degree-0 generators; past this
/// many of them it refuses instead of running for hours.
pub const MAX_DEGREE_ZERO: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AugmentError {
    #[error("augmentation has {found} values but the DGA has {expected} generators")]
    Arity { expected: usize, found: usize },
    #[error("augmentation sends generator {0}, which has nonzero grading, to 1")]
    NonzeroGrading(GenId),
    #[error("augmentation does not vanish on the differential of generator {0}")]
    NotAnnihilating(GenId),
    #[error("{count} degree-0 generators exceed the enumeration bound of {MAX_DEGREE_ZERO}")]
    TooManyDegreeZero { count: usize },
    #[error("linearized differential does not square to zero")]
    NotSquareZero,
    #[error("linearized differential maps generator {source_id} to {target_id}, which is not one degree lower")]
    DegreeMismatch { source_id: GenId, target_id: GenId },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An algebra map `ε: A → Z2` with `ε = 0` off degree 0 and `ε∘∂ = 0`.
///
/// Only constructible through [`Augmentation::new`], which checks both
/// conditions against a DGA.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Augmentation {
    values: Vec<bool>,
}

impl Augmentation {
    pub fn new(dga: &Dga, values: Vec<bool>) -> Result<Self, AugmentError> {
        if values.len() != dga.len() {
            return Err(AugmentError::Arity { expected: dga.len(), found: values.len() });
        }
        for g in dga.generators() {
            if values[g.id] && g.grading != 0 {
                return Err(AugmentError::NonzeroGrading(g.id));
            }
        }
        let eps = Augmentation { values };
        for g in dga.generators() {
            if eps.evaluate(dga.differential(g.id)?) {
                return Err(AugmentError::NotAnnihilating(g.id));
            }
        }
        Ok(eps)
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn value(&self, id: GenId) -> bool {
        self.values[id]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `ε` applied to an element: the unit goes to 1, a word to the product of
    /// its letter values, sums mod 2.
    ///
    /// Panics if `elem` mentions a generator outside this augmentation.
    pub fn evaluate(&self, elem: &Element) -> bool {
        elem.words()
            .filter(|w| w.letters().iter().all(|&id| self.values[id]))
            .count()
            % 2
            == 1
    }

    /// Extends by zero onto a DGA that has extra generators appended (such as a
    /// stabilization), re-checking the augmentation conditions there.
    pub fn extend_by_zero(&self, dga: &Dga) -> Result<Augmentation, AugmentError> {
        let mut values = self.values.clone();
        if values.len() > dga.len() {
            return Err(AugmentError::Arity { expected: dga.len(), found: values.len() });
        }
        values.resize(dga.len(), false);
        Augmentation::new(dga, values)
    }

    /// Values on the degree-0 generators, in id order.
    pub fn degree_zero_values(&self, dga: &Dga) -> Vec<bool> {
        dga.generators()
            .iter()
            .filter(|g| g.grading == 0)
            .map(|g| self.values[g.id])
            .collect()
    }
}

/// Every augmentation of `dga`, in lexicographic order of the value vectors on
/// the degree-0 generators (first generator most significant, `0 < 1`).
pub fn enumerate_augmentations(dga: &Dga) -> Result<Vec<Augmentation>, AugmentError> {
    let degree_zero: Vec<GenId> =
        dga.generators().iter().filter(|g| g.grading == 0).map(|g| g.id).collect();
    let m = degree_zero.len();
    if m > MAX_DEGREE_ZERO {
        return Err(AugmentError::TooManyDegreeZero { count: m });
    }
    let mut found = Vec::new();
    let mut values = vec![false; dga.len()];
    for mask in 0u64..(1u64 << m) {
        for (i, &id) in degree_zero.iter().enumerate() {
            values[id] = (mask >> (m - 1 - i)) & 1 == 1;
        }
        let candidate = Augmentation { values: values.clone() };
        let annihilates = dga
            .differentials()
            .iter()
            .all(|d| !candidate.evaluate(d));
        if annihilates {
            found.push(candidate);
        }
    }
    Ok(found)
}

/// A Z2 chain complex on the generators of a DGA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedComplex {
    names: Vec<String>,
    gradings: Vec<i64>,
    matrix: Gf2Matrix,
}

impl LinearizedComplex {
    /// Checks that `matrix` squares to zero and lowers grading by exactly one.
    pub fn new(names: Vec<String>, gradings: Vec<i64>, matrix: Gf2Matrix) -> Result<Self, AugmentError> {
        assert_eq!(names.len(), gradings.len());
        assert_eq!(matrix.ncols(), gradings.len());
        assert_eq!(matrix.nrows(), gradings.len());
        for (q, col) in matrix.columns().iter().enumerate() {
            if let Some(&p) = col.indices().iter().find(|&&p| gradings[p] != gradings[q] - 1) {
                return Err(AugmentError::DegreeMismatch { source_id: q, target_id: p });
            }
        }
        if !matrix.mul(&matrix).is_zero() {
            return Err(AugmentError::NotSquareZero);
        }
        Ok(LinearizedComplex { names, gradings, matrix })
    }

    pub fn len(&self) -> usize {
        self.gradings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gradings.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gradings(&self) -> &[i64] {
        &self.gradings
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.matrix
    }

    /// `∂₁q` as a set of generator ids.
    pub fn differential(&self, id: GenId) -> &Chain {
        self.matrix.column(id)
    }

    pub fn display_chain(&self, chain: &Chain) -> String {
        if chain.is_zero() {
            return "0".to_string();
        }
        chain.indices().iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join(" + ")
    }
}

impl fmt::Display for LinearizedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, name) in self.names.iter().enumerate() {
            writeln!(f, "d {name} = {}", self.display_chain(self.differential(id)))?;
        }
        Ok(())
    }
}

/// The linear part of `ε`-conjugated differential.
///
/// A word `x1…xk` in `∂q` contributes `Σ_l (Π_{m≠l} ε(xm)) x_l`: with two or
/// more letters sent to zero it contributes nothing, with exactly one it
/// contributes that letter, and otherwise every letter.
pub fn linearized_differential(dga: &Dga, eps: &Augmentation) -> Result<LinearizedComplex, AugmentError> {
    let eps = Augmentation::new(dga, eps.values.clone())?;
    let mut cols = Vec::with_capacity(dga.len());
    for d in dga.differentials() {
        let mut col = Chain::new();
        for word in d.words() {
            let letters = word.letters();
            let mut zeros = letters.iter().enumerate().filter(|(_, &id)| !eps.value(id));
            match (zeros.next(), zeros.next()) {
                (Some(_), Some(_)) => {}
                (Some((_, &only)), None) => col.toggle(only),
                (None, _) => letters.iter().for_each(|&id| col.toggle(id)),
            }
        }
        cols.push(col);
    }
    let matrix = Gf2Matrix::from_columns(dga.len(), cols);
    LinearizedComplex::new(dga.names(), dga.gradings(), matrix)
}
