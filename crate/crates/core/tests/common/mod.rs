//! Seeded random inputs shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use legch::algebra::{Dga, Element, GenId, Generator, HeightAssignment, Word};
use legch::augment::{linearized_differential, Augmentation};
use legch::diagram::{InequalitySystem, LinearForm};
use legch::gf2::{Chain, Gf2Matrix};
use legch::io::parse_knot_file;
use legch::persist::{build_filtered_complex, Bar, Barcode, FilteredComplex};
use legch::rational::{ratio, Rational};
use legch::transform::{apply_elementary, ElementaryAutomorphism};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn corpus_path(name: &str) -> String {
    format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn load(name: &str) -> legch::io::KnotFile {
    let bytes = std::fs::read(corpus_path(name)).expect("corpus file");
    parse_knot_file(&bytes).expect("corpus file parses")
}

/// A random DGA with heights such that the zero augmentation linearizes to a
/// filtered complex.
pub struct RandomKnot {
    pub dga: Dga,
    pub heights: HeightAssignment,
}

impl RandomKnot {
    pub fn zero_augmentation(&self) -> Augmentation {
        Augmentation::new(&self.dga, vec![false; self.dga.len()]).expect("zero augments a DGA without constants")
    }

    pub fn complex(&self) -> FilteredComplex {
        let lin = linearized_differential(&self.dga, &self.zero_augmentation()).expect("linearizes");
        build_filtered_complex(&lin, &self.heights).expect("heights filter the complex")
    }
}

fn quarter(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.random_range(1..=24), 4)
}

/// Builds cancelling pairs `∂q = p` and lone cycles, scrambles them with a
/// filtration-preserving change of basis, then conjugates by a few
/// semimonotonic automorphisms so the differential picks up longer words.
pub fn random_knot(rng: &mut ChaCha8Rng, max_generators: usize) -> RandomKnot {
    let n = rng.random_range(1..=max_generators);
    let pairs = rng.random_range(0..=n / 2);
    let mut gradings = Vec::with_capacity(n);
    let mut heights = Vec::with_capacity(n);
    let mut boundary = Vec::with_capacity(n);
    for _ in 0..pairs {
        let g = rng.random_range(-1..=1);
        let (mut lo, mut hi) = (quarter(rng), quarter(rng));
        while lo == hi {
            hi = quarter(rng);
        }
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        let p = gradings.len();
        gradings.extend([g, g + 1]);
        heights.extend([lo, hi]);
        boundary.extend([None, Some(p)]);
    }
    while gradings.len() < n {
        gradings.push(rng.random_range(-1..=2));
        heights.push(quarter(rng));
        boundary.push(None);
    }

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut g2 = vec![0; n];
    let mut h2 = vec![ratio(1, 1); n];
    let mut cols = vec![Chain::new(); n];
    for old in 0..n {
        g2[perm[old]] = gradings[old];
        h2[perm[old]] = heights[old].clone();
        if let Some(p) = boundary[old] {
            cols[perm[old]] = Chain::single(perm[p]);
        }
    }
    let (gradings, heights) = (g2, h2);
    let below = |i: usize, j: usize| (&heights[i], i) < (&heights[j], j);

    let mut d = Gf2Matrix::from_columns(n, cols);
    for _ in 0..rng.random_range(0..=3 * n) {
        let j = rng.random_range(0..n);
        let candidates: Vec<usize> = (0..n).filter(|&i| gradings[i] == gradings[j] && below(i, j)).collect();
        let Some(&i) = candidates.choose(rng) else { continue };
        let mut e: Vec<Chain> = (0..n).map(Chain::single).collect();
        e[j].toggle(i);
        let e = Gf2Matrix::from_columns(n, e);
        d = e.mul(&d).mul(&e);
    }

    let generators = (0..n).map(|id| Generator { id, name: format!("g{id}"), grading: gradings[id] }).collect();
    let differential = d
        .columns()
        .iter()
        .map(|c| c.indices().iter().map(|&i| Word::letter(i)).collect::<Element>())
        .collect();
    let mut dga = Dga::new(generators, differential).expect("well-formed");

    for _ in 0..rng.random_range(0..=3) {
        let target = rng.random_range(0..n);
        let lower: Vec<GenId> = (0..n).filter(|&i| heights[i] < heights[target]).collect();
        if lower.is_empty() {
            continue;
        }
        let mut addend = Element::zero();
        for _ in 0..4 {
            let len = rng.random_range(1..=3);
            let word: Word = (0..len).map(|_| *lower.choose(rng).unwrap()).collect();
            if dga.word_grading(&word).unwrap() == gradings[target] {
                addend.toggle(word);
            }
        }
        let phi = ElementaryAutomorphism::new(target, addend).expect("addend avoids its target");
        dga = apply_elementary(&dga, &phi).expect("homogeneous addend");
    }
    let heights = HeightAssignment::from_values(heights).expect("positive heights");
    RandomKnot { dga, heights }
}

/// Sparse systems over `n` variables with coefficients in {-2,-1,1,2}.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize, max_rows: usize) -> InequalitySystem {
    let rows = rng.random_range(0..=max_rows);
    let forms = (0..rows)
        .map(|_| {
            let mut vars: Vec<GenId> = (0..n).collect();
            vars.shuffle(rng);
            let k = rng.random_range(1..=n.min(4));
            let terms = vars[..k].iter().map(|&v| (v, *[-2, -1, 1, 2].choose(rng).unwrap())).collect();
            LinearForm::new(terms).unwrap()
        })
        .collect();
    InequalitySystem::new(forms)
}

/// Small barcodes on degrees 0..=1 with endpoints on a quarter grid.
/// `infinite` fixes the number of infinite bars in each degree.
pub fn random_barcode(rng: &mut ChaCha8Rng, max_bars: usize, infinite: [usize; 2]) -> Barcode {
    let mut bars = Vec::new();
    for (degree, &count) in infinite.iter().enumerate() {
        for _ in 0..count {
            bars.push(Bar::new(degree as i64, quarter(rng), None).unwrap());
        }
    }
    let finite = rng.random_range(0..=max_bars.saturating_sub(bars.len()));
    for _ in 0..finite {
        let birth = quarter(rng);
        let death = &birth + ratio(rng.random_range(1..=16), 4);
        bars.push(Bar::new(rng.random_range(0..=1), birth, Some(death)).unwrap());
    }
    Barcode::new(bars)
}

pub fn random_infinite_counts(rng: &mut ChaCha8Rng) -> [usize; 2] {
    [rng.random_range(0..=2), rng.random_range(0..=1)]
}
