//! Generating polynomials of a DGA and its barcode, the strong Morse
//! identity, and the bottleneck distance between barcodes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::algebra::Dga;
use crate::persist::{Bar, Barcode};
use crate::rational::{int, Extended, Rational};

/// Integer Laurent polynomial in `z`, with zero coefficients pruned.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial(BTreeMap<i64, i64>);

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial(BTreeMap::new())
    }

    pub fn monomial(coefficient: i64, exponent: i64) -> Self {
        let mut p = LaurentPolynomial::zero();
        p.add_term(exponent, coefficient);
        p
    }

    /// Counts each exponent once per occurrence.
    pub fn counting(exponents: impl IntoIterator<Item = i64>) -> Self {
        let mut p = LaurentPolynomial::zero();
        for e in exponents {
            p.add_term(e, 1);
        }
        p
    }

    pub fn add_term(&mut self, exponent: i64, coefficient: i64) {
        let c = self.0.entry(exponent).or_insert(0);
        *c += coefficient;
        if *c == 0 {
            self.0.remove(&exponent);
        }
    }

    pub fn coefficient(&self, exponent: i64) -> i64 {
        self.0.get(&exponent).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Value at `z = 1`.
    pub fn at_one(&self) -> i64 {
        self.0.values().sum()
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Highest power first, e.g. `2z+3`, `z^2-z^-1`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.0.iter().rev().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let magnitude = c.unsigned_abs();
            let power = match *e {
                0 => String::new(),
                1 => "z".to_string(),
                e => format!("z^{e}"),
            };
            let coefficient = if magnitude == 1 && *e != 0 { String::new() } else { magnitude.to_string() };
            write!(f, "{sign}{coefficient}{power}")?;
        }
        Ok(())
    }
}

/// Number of generators in each grading.
pub fn morse_chekanov(dga: &Dga) -> LaurentPolynomial {
    LaurentPolynomial::counting(dga.generators().iter().map(|g| g.grading))
}

/// Number of infinite bars in each degree.
pub fn poincare_chekanov(barcode: &Barcode) -> LaurentPolynomial {
    LaurentPolynomial::counting(barcode.bars().iter().filter(|b| b.is_infinite()).map(|b| b.degree))
}

/// Number of finite bars in each degree.
pub fn finite_bar_polynomial(barcode: &Barcode) -> LaurentPolynomial {
    LaurentPolynomial::counting(barcode.bars().iter().filter(|b| !b.is_infinite()).map(|b| b.degree))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongMorseReport {
    pub mc: LaurentPolynomial,
    pub pc: LaurentPolynomial,
    pub r: LaurentPolynomial,
    /// `MC − PC`
    pub lhs: LaurentPolynomial,
    /// `(z + 1) R`
    pub rhs: LaurentPolynomial,
    pub holds: bool,
}

/// Compares `MC(z) − PC(z)` with `(z + 1) R(z)` exactly.
pub fn check_strong_morse(dga: &Dga, barcode: &Barcode) -> StrongMorseReport {
    let mc = morse_chekanov(dga);
    let pc = poincare_chekanov(barcode);
    let r = finite_bar_polynomial(barcode);
    let lhs = &mc - &pc;
    let z_plus_one = &LaurentPolynomial::monomial(1, 1) + &LaurentPolynomial::monomial(1, 0);
    let rhs = &z_plus_one * &r;
    let holds = lhs == rhs;
    StrongMorseReport { mc, pc, r, lhs, rhs, holds }
}

fn abs(r: Rational) -> Rational {
    if r < int(0) {
        -r
    } else {
        r
    }
}

/// Cost of matching two bars, or `None` if one is finite and the other not.
fn match_cost(a: &Bar, b: &Bar) -> Option<Rational> {
    let births = abs(&a.birth - &b.birth);
    match (&a.death, &b.death) {
        (None, None) => Some(births),
        (Some(x), Some(y)) => Some(births.max(abs(x - y))),
        _ => None,
    }
}

/// Cost of leaving a finite bar unmatched: half its length.
fn deletion_cost(bar: &Bar) -> Option<Rational> {
    bar.death.as_ref().map(|d| (d - &bar.birth) / int(2))
}

/// Kuhn's augmenting-path algorithm; true if every left vertex is matched.
fn has_perfect_matching(adjacency: &[Vec<usize>], right_size: usize) -> bool {
    fn augment(u: usize, adjacency: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, adjacency, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; right_size];
    (0..adjacency.len()).all(|u| augment(u, adjacency, &mut vec![false; right_size], &mut owner))
}

/// Whether the bars of one degree can be matched within `delta`.
///
/// Left vertices are the bars of `a` followed by one diagonal slot per finite
/// bar of `b`; right vertices are the bars of `b` followed by one diagonal
/// slot per finite bar of `a`.
fn feasible(a: &[&Bar], b: &[&Bar], delta: &Rational) -> bool {
    let a_fin: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_infinite()).collect();
    let b_fin: Vec<usize> = (0..b.len()).filter(|&j| !b[j].is_infinite()).collect();
    let right_size = b.len() + a_fin.len();
    let mut adjacency = Vec::with_capacity(a.len() + b_fin.len());
    for (i, bar) in a.iter().enumerate() {
        let mut edges: Vec<usize> = (0..b.len())
            .filter(|&j| match_cost(bar, b[j]).is_some_and(|c| c <= *delta))
            .collect();
        if let Some(slot) = a_fin.iter().position(|&k| k == i) {
            if deletion_cost(bar).is_some_and(|c| c <= *delta) {
                edges.push(b.len() + slot);
            }
        }
        adjacency.push(edges);
    }
    for &j in &b_fin {
        let mut edges = Vec::new();
        if deletion_cost(b[j]).is_some_and(|c| c <= *delta) {
            edges.push(j);
        }
        edges.extend(b.len()..right_size);
        adjacency.push(edges);
    }
    has_perfect_matching(&adjacency, right_size)
}

fn degree_distance(a: &[&Bar], b: &[&Bar]) -> Extended {
    let infinite = |bars: &[&Bar]| bars.iter().filter(|x| x.is_infinite()).count();
    if infinite(a) != infinite(b) {
        return Extended::Infinity;
    }
    let mut candidates = BTreeSet::from([int(0)]);
    for x in a {
        for y in b {
            candidates.extend(match_cost(x, y));
        }
    }
    candidates.extend(a.iter().chain(b).filter_map(|x| deletion_cost(x)));
    let candidates: Vec<Rational> = candidates.into_iter().collect();

    // Feasibility is monotone in delta and the largest candidate always works.
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(a, b, &candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Extended::Finite(candidates[lo].clone())
}

/// Bottleneck distance, degree by degree, maximized over degrees. Infinite
/// bars only match infinite bars; a finite bar may be dropped at the cost of
/// half its length.
pub fn interleaving_distance(b1: &Barcode, b2: &Barcode) -> Extended {
    let degrees: BTreeSet<i64> = b1.degrees().into_iter().chain(b2.degrees()).collect();
    let mut worst = Extended::Finite(int(0));
    for degree in degrees {
        let a: Vec<&Bar> = b1.in_degree(degree).collect();
        let b: Vec<&Bar> = b2.in_degree(degree).collect();
        worst = worst.max(degree_distance(&a, &b));
    }
    worst
}
