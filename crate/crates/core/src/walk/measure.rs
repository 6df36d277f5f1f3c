use crate::building::{LaurentMatrix, LaurentPoly};
use crate::tree_flats::GroupWord;
use crate::{Error, Result};

/// A finitely supported probability measure with rational weights
/// `wᵢ / Σw`. Sampling maps a uniform 64-bit draw `u` to the atom
/// containing `⌊u·Σw / 2⁶⁴⌋`, so it is exact and platform independent.
#[derive(Clone, Debug)]
pub struct StepMeasure<E> {
    pub support: Vec<E>,
    pub weights: Vec<u64>,
    pub symmetric: bool,
    cumulative: Vec<u64>,
}

impl<E> StepMeasure<E> {
    pub fn new(support: Vec<E>, weights: Vec<u64>, symmetric: bool) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidInput("empty support".into()));
        }
        if weights.len() != support.len() || weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidInput("weights must be positive, one per atom".into()));
        }
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0u64;
        for w in &weights {
            acc = acc.checked_add(*w).ok_or_else(|| Error::InvalidInput("weights overflow".into()))?;
            cumulative.push(acc);
        }
        Ok(Self { support, weights, symmetric, cumulative })
    }

    pub fn uniform(support: Vec<E>, symmetric: bool) -> Result<Self> {
        let n = support.len();
        Self::new(support, vec![1; n], symmetric)
    }

    pub fn total_weight(&self) -> u64 {
        *self.cumulative.last().unwrap()
    }

    pub fn probability(&self, i: usize) -> f64 {
        self.weights[i] as f64 / self.total_weight() as f64
    }

    pub fn sample_index(&self, u: u64) -> usize {
        let r = ((u as u128 * self.total_weight() as u128) >> 64) as u64;
        self.cumulative.partition_point(|&c| c <= r)
    }

    pub fn sample(&self, u: u64) -> &E {
        &self.support[self.sample_index(u)]
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

impl<E: PartialEq> StepMeasure<E> {
    /// Checks the symmetric flag against the support, given inversion.
    pub fn check_symmetry(&self, inverse: impl Fn(&E) -> E) -> bool {
        self.support.iter().zip(&self.weights).all(|(g, w)| {
            let gi = inverse(g);
            self.support.iter().zip(&self.weights).any(|(h, v)| *h == gi && v == w)
        })
    }
}

/// `±1` on `ℤ`.
pub fn line_symmetric() -> StepMeasure<i64> {
    StepMeasure::uniform(vec![1, -1], true).unwrap()
}

/// The deterministic translation `+1`.
pub fn line_translation() -> StepMeasure<i64> {
    StepMeasure::uniform(vec![1], false).unwrap()
}

pub fn grid_symmetric() -> StepMeasure<(i64, i64)> {
    StepMeasure::uniform(vec![(1, 0), (-1, 0), (0, 1), (0, -1)], true).unwrap()
}

/// Uniform on `A(±1,0), A(0,±1), B(±1)`; generates `ℤ² ∗ ℤ`.
pub fn tree_flats_symmetric() -> StepMeasure<GroupWord> {
    StepMeasure::uniform(crate::tree_flats::TreeFlats::generators(), true).unwrap()
}

/// Uniform on the four `A` generators; stays in one flat.
pub fn tree_flats_flat_only() -> StepMeasure<GroupWord> {
    let gens = vec![GroupWord::a(1, 0), GroupWord::a(-1, 0), GroupWord::a(0, 1), GroupWord::a(0, -1)];
    StepMeasure::uniform(gens, true).unwrap()
}

/// Uniform on `B(±1)`; a copy of the `ℤ` walk.
pub fn tree_flats_b_only() -> StepMeasure<GroupWord> {
    StepMeasure::uniform(vec![GroupWord::b(1), GroupWord::b(-1)], true).unwrap()
}

/// Uniform on the elementary matrices `e_ij(±t^{±1})`, `i ≠ j`: twelve
/// involutions for `q = 2`, twenty-four elements otherwise. Symmetric since
/// `e_ij(c)⁻¹ = e_ij(−c)`; the support generates `SL₃(𝔽_q[t, t⁻¹])`.
pub fn building_elementary(q: u32) -> Result<StepMeasure<LaurentMatrix>> {
    if !crate::building::poly::is_prime(q) {
        return Err(Error::InvalidInput(format!("q = {q} is not prime")));
    }
    let signs: &[u32] = if q == 2 { &[1] } else { &[1, q - 1] };
    let mut gens = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for e in [1, -1] {
                for &c in signs {
                    gens.push(LaurentMatrix::elementary(q, i, j, LaurentPoly::monomial(q, c, e)));
                }
            }
        }
    }
    StepMeasure::uniform(gens, true)
}

/// The single element `diag(t, 1, t⁻¹)`.
pub fn building_diagonal(q: u32) -> StepMeasure<LaurentMatrix> {
    StepMeasure::uniform(vec![LaurentMatrix::monomial_diagonal(q, [1, 0, -1])], false).unwrap()
}
