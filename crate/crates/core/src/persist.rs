//! Height-filtered linearized complexes and their barcodes.

use std::cmp::Ordering;
use std::fmt;

use crate::algebra::{GenId, HeightAssignment};
use crate::augment::LinearizedComplex;
use crate::gf2::{Chain, Gf2Matrix};
use crate::rational::{format_rational, Extended, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PersistError {
    #[error("no height for generator {0}")]
    MissingHeight(String),
    #[error("height of {0} must be positive")]
    NonPositiveHeight(String),
    #[error("differential of {source_name} (height {source_height}) reaches {target_name} (height {target_height}); heights must strictly drop")]
    HeightViolation {
        source_name: String,
        source_height: String,
        target_name: String,
        target_height: String,
    },
    #[error("differential does not square to zero")]
    NotSquareZero,
    #[error("differential of {source_name} reaches {target_name}, which is not one degree lower")]
    DegreeMismatch { source_name: String, target_name: String },
    #[error("bar [{birth}, {death}) must have 0 < birth < death")]
    InvalidBar { birth: String, death: String },
    #[error("expected {expected} entries, found {found}")]
    SizeMismatch { expected: usize, found: usize },
}

/// A linearized complex together with generator heights, checked to be a
/// filtration: `∂` strictly lowers height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    names: Vec<String>,
    gradings: Vec<i64>,
    heights: Vec<Rational>,
    matrix: Gf2Matrix,
}

impl FilteredComplex {
    pub fn new(
        names: Vec<String>,
        gradings: Vec<i64>,
        heights: Vec<Rational>,
        matrix: Gf2Matrix,
    ) -> Result<Self, PersistError> {
        let n = names.len();
        for found in [gradings.len(), heights.len(), matrix.ncols(), matrix.nrows()] {
            if found != n {
                return Err(PersistError::SizeMismatch { expected: n, found });
            }
        }
        if let Some(i) = heights.iter().position(|h| *h <= Rational::from_integer(0.into())) {
            return Err(PersistError::NonPositiveHeight(names[i].clone()));
        }
        for (q, col) in matrix.columns().iter().enumerate() {
            for &p in col.indices() {
                if gradings[p] != gradings[q] - 1 {
                    return Err(PersistError::DegreeMismatch {
                        source_name: names[q].clone(),
                        target_name: names[p].clone(),
                    });
                }
                if heights[p] >= heights[q] {
                    return Err(PersistError::HeightViolation {
                        source_name: names[q].clone(),
                        source_height: format_rational(&heights[q]),
                        target_name: names[p].clone(),
                        target_height: format_rational(&heights[p]),
                    });
                }
            }
        }
        if !matrix.mul(&matrix).is_zero() {
            return Err(PersistError::NotSquareZero);
        }
        Ok(FilteredComplex { names, gradings, heights, matrix })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gradings(&self) -> &[i64] {
        &self.gradings
    }

    pub fn heights(&self) -> &[Rational] {
        &self.heights
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.matrix
    }

    fn label(&self, chain: &Chain) -> Vec<String> {
        chain.indices().iter().map(|&i| self.names[i].clone()).collect()
    }
}

pub fn build_filtered_complex(lin: &LinearizedComplex, h: &HeightAssignment) -> Result<FilteredComplex, PersistError> {
    let heights = (0..lin.len())
        .map(|id| h.get(id).cloned().map_err(|_| PersistError::MissingHeight(lin.names()[id].clone())))
        .collect::<Result<Vec<_>, _>>()?;
    FilteredComplex::new(lin.names().to_vec(), lin.gradings().to_vec(), heights, lin.matrix().clone())
}

/// An interval `[birth, death)` in one degree; `death = None` is `∞`.
///
/// Labels are Z2 combinations of generator names representing the class
/// born (and, for finite bars, the chain whose boundary kills it).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bar {
    pub degree: i64,
    pub birth: Rational,
    pub death: Option<Rational>,
    pub birth_label: Option<Vec<String>>,
    pub death_label: Option<Vec<String>>,
}

impl Bar {
    pub fn new(degree: i64, birth: Rational, death: Option<Rational>) -> Result<Self, PersistError> {
        let positive = birth > Rational::from_integer(0.into());
        if !positive || death.as_ref().is_some_and(|d| *d <= birth) {
            return Err(PersistError::InvalidBar {
                birth: format_rational(&birth),
                death: death.as_ref().map_or("inf".into(), format_rational),
            });
        }
        Ok(Bar { degree, birth, death, birth_label: None, death_label: None })
    }

    pub fn with_labels(mut self, birth_label: Option<Vec<String>>, death_label: Option<Vec<String>>) -> Self {
        self.birth_label = birth_label;
        self.death_label = death_label;
        self
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_none()
    }

    pub fn death_extended(&self) -> Extended {
        self.death.clone().map_or(Extended::Infinity, Extended::Finite)
    }

    /// `birth ≤ t < death`.
    pub fn contains(&self, t: &Rational) -> bool {
        self.birth <= *t && self.death.as_ref().is_none_or(|d| t < d)
    }

    /// Sort key: degree, birth, then death with `∞` last.
    pub fn key(&self) -> (i64, &Rational, Extended) {
        (self.degree, &self.birth, self.death_extended())
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let death = self.death.as_ref().map_or("inf".to_string(), format_rational);
        write!(f, "H{} [{}, {})", self.degree, format_rational(&self.birth), death)
    }
}

/// A multiset of bars, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort_by(|a, b| a.key().cmp(&b.key()).then_with(|| a.birth_label.cmp(&b.birth_label)));
        Barcode { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Sorted `(degree, birth, death)` triples, ignoring labels.
    pub fn intervals(&self) -> Vec<(i64, Rational, Extended)> {
        self.bars.iter().map(|b| (b.degree, b.birth.clone(), b.death_extended())).collect()
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.bars.iter().map(|b| b.degree).collect();
        d.dedup();
        d
    }

    pub fn in_degree(&self, degree: i64) -> impl Iterator<Item = &Bar> + '_ {
        self.bars.iter().filter(move |b| b.degree == degree)
    }

    /// Number of bars in `degree` alive at level `t`.
    pub fn count_at(&self, degree: i64, t: &Rational) -> usize {
        self.in_degree(degree).filter(|b| b.contains(t)).count()
    }
}

/// Standard Z2 column reduction with columns in (height, id) order.
pub fn compute_barcode(fc: &FilteredComplex) -> Barcode {
    let n = fc.len();
    let mut order: Vec<GenId> = (0..n).collect();
    order.sort_by(|&a, &b| match fc.heights[a].cmp(&fc.heights[b]) {
        Ordering::Equal => a.cmp(&b),
        other => other,
    });
    let mut position = vec![0; n];
    for (pos, &id) in order.iter().enumerate() {
        position[id] = pos;
    }
    let to_ids = |chain: &Chain| -> Chain { chain.map_indices(|p| order[p]) };

    let mut reduced: Vec<Chain> = order.iter().map(|&id| fc.matrix.column(id).map_indices(|i| position[i])).collect();
    let mut basis: Vec<Chain> = (0..n).map(Chain::single).collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for j in 0..n {
        while let Some(low) = reduced[j].last() {
            let Some(k) = owner[low] else { break };
            let (rk, vk) = (reduced[k].clone(), basis[k].clone());
            reduced[j].add_assign(&rk);
            basis[j].add_assign(&vk);
        }
        if let Some(low) = reduced[j].last() {
            owner[low] = Some(j);
        }
    }

    let mut bars = Vec::new();
    for j in 0..n {
        let q = order[j];
        if let Some(low) = reduced[j].last() {
            let p = order[low];
            let bar = Bar::new(fc.gradings[p], fc.heights[p].clone(), Some(fc.heights[q].clone()))
                .expect("strict height drop rules out empty bars");
            bars.push(bar.with_labels(
                Some(fc.label(&to_ids(&reduced[j]))),
                Some(fc.label(&to_ids(&basis[j]))),
            ));
        } else if owner[j].is_none() {
            let bar = Bar::new(fc.gradings[q], fc.heights[q].clone(), None).expect("heights are positive");
            bars.push(bar.with_labels(Some(fc.label(&to_ids(&basis[j]))), None));
        }
    }
    Barcode::new(bars)
}

/// `dim H_degree` of the sub-complex on generators of height at most `t`, by
/// dense elimination: `n_k − rank ∂_k − rank ∂_{k+1}`.
pub fn homology_rank_oracle(fc: &FilteredComplex, degree: i64, t: &Rational) -> usize {
    let in_degree = |k: i64| -> Vec<usize> {
        (0..fc.len()).filter(|&i| fc.gradings[i] == k && fc.heights[i] <= *t).collect()
    };
    let (below, here, above) = (in_degree(degree - 1), in_degree(degree), in_degree(degree + 1));
    let rank_out = fc.matrix.submatrix(&below, &here).rank();
    let rank_in = fc.matrix.submatrix(&here, &above).rank();
    here.len() - rank_out - rank_in
}
