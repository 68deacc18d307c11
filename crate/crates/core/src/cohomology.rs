//! Betti tables of the underlying space and Chen-Ruan Betti tables.
//!
//! The underlying space of a model with `m` edges has rational cohomology of
//! rank `1, m - 2, 1` in degrees `0, 2, 4`. Chen-Ruan cohomology adds one
//! generator in degree `2·age(g)` for each twisted sector `(v, g)`; degrees are
//! kept as exact rationals.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::lattice::{LatticeInt, Vector2};
use crate::localgroup::twisted_sectors;
use crate::model::Model;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("vertex {vertex} is singular; the index count needs a manifold")]
    NotAManifold { vertex: usize },
    #[error("direction {direction} pairs to zero with a dual basis vector at vertex {vertex}")]
    GenericityFailure { direction: String, vertex: usize },
}

/// Ranks of the ordinary rational cohomology, keyed by integer degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiTable {
    pub entries: BTreeMap<u32, u64>,
}

impl BettiTable {
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn get(&self, degree: u32) -> u64 {
        self.entries.get(&degree).copied().unwrap_or(0)
    }
}

/// Ranks of Chen-Ruan cohomology keyed by rational degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrBettiTable<I: LatticeInt> {
    pub entries: BTreeMap<Ratio<I>, u64>,
}

impl<I: LatticeInt> Default for CrBettiTable<I> {
    fn default() -> Self {
        Self { entries: BTreeMap::new() }
    }
}

impl<I: LatticeInt> CrBettiTable<I> {
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn get(&self, degree: &Ratio<I>) -> u64 {
        self.entries.get(degree).copied().unwrap_or(0)
    }

    pub fn add(&mut self, degree: Ratio<I>, count: u64) {
        *self.entries.entry(degree).or_insert(0) += count;
    }

    /// True if some generator sits in a fractional degree.
    pub fn has_fractional_degrees(&self) -> bool {
        self.entries.keys().any(|d| !d.is_integer())
    }
}

pub fn singular_betti<I: LatticeInt>(model: &Model<I>) -> BettiTable {
    let m = model.len() as u64;
    BettiTable {
        entries: BTreeMap::from([(0, 1), (2, m - 2), (4, 1)]),
    }
}

pub fn cr_betti<I: LatticeInt>(model: &Model<I>) -> CrBettiTable<I> {
    let mut table = CrBettiTable::default();
    for (degree, dim) in singular_betti(model).entries {
        let degree = I::from_u32(degree).expect("small degree");
        table.add(Ratio::from_integer(degree), dim);
    }
    let two = Ratio::from_integer(I::one() + I::one());
    for sector in twisted_sectors(model) {
        table.add(&sector.element.age * &two, 1);
    }
    table
}

/// Dual basis `(μ1, μ2)` of a unimodular pair `(u, v)`: `⟨μ1, u⟩ = ⟨μ2, v⟩ = 1`
/// and `⟨μ1, v⟩ = ⟨μ2, u⟩ = 0`.
fn dual_basis<I: LatticeInt>(u: &Vector2<I>, v: &Vector2<I>) -> [Vector2<I>; 2] {
    [
        Vector2::new(v.y.clone(), -v.x.clone()),
        Vector2::new(-u.y.clone(), u.x.clone()),
    ]
}

fn manifold_check<I: LatticeInt>(model: &Model<I>) -> Result<(), CohomologyError> {
    match model.vertices().iter().find(|v| !v.det.is_one()) {
        Some(v) => Err(CohomologyError::NotAManifold { vertex: v.index }),
        None => Ok(()),
    }
}

/// Todd genus as the number of vertices of index zero for direction `nu`.
///
/// The index of a vertex counts dual basis vectors pairing negatively with
/// `nu`. Fails if `nu` is orthogonal to one of them.
pub fn todd_genus_with_direction<I: LatticeInt>(model: &Model<I>, nu: &Vector2<I>) -> Result<u64, CohomologyError> {
    manifold_check(model)?;
    let mut count = 0;
    for v in model.vertices() {
        let mut index = 0;
        for mu in dual_basis(&v.first, &v.second) {
            let pairing = mu.dot(nu);
            if pairing.is_zero() {
                return Err(CohomologyError::GenericityFailure {
                    direction: nu.to_string(),
                    vertex: v.index,
                });
            }
            if pairing.is_negative() {
                index += 1;
            }
        }
        if index == 0 {
            count += 1;
        }
    }
    Ok(count)
}

/// The deterministic generic direction `(B, 1)`, `B = 1 + max |μ coefficient|`.
pub fn generic_direction<I: LatticeInt>(model: &Model<I>) -> Vector2<I> {
    let bound = model
        .vertices()
        .iter()
        .flat_map(|v| dual_basis(&v.first, &v.second))
        .flat_map(|mu| [mu.x.abs(), mu.y.abs()])
        .max()
        .unwrap_or_else(I::zero);
    Vector2::new(bound + I::one(), I::one())
}

/// Todd genus of a positively omnioriented quasitoric manifold.
pub fn todd_genus<I: LatticeInt>(model: &Model<I>) -> Result<u64, CohomologyError> {
    manifold_check(model)?;
    let mut nu = generic_direction(model);
    loop {
        match todd_genus_with_direction(model, &nu) {
            Err(CohomologyError::GenericityFailure { .. }) => nu.x = nu.x + I::one(),
            other => return other,
        }
    }
}
