//! Blowdowns, blowups and crepant resolutions of vertex singularities.
//!
//! A blowdown deletes one edge `E2` (vector `λ2`) and lets its neighbours
//! `λ1, λ3` meet at a new vertex `w`. It is admissible when one endpoint of
//! `E2` is smooth and, normalising that side to `det[λ1, λ2] = 1`,
//!
//! ```text
//! 0 < k := det[λ2, λ3] <= m := det[λ1, λ3]
//! ```
//!
//! The mirrored condition (`det[λ2, λ3] = 1`, `k := det[λ1, λ2]`) is accepted
//! too; the first side wins when both hold. The blowdown is crepant iff
//! `k + 1 = m`, i.e. `det[λ1, λ3] = det[λ1, λ2] + det[λ2, λ3]`.
//!
//! A blowup is the inverse insertion. Inserting at vertex `i < n - 1` puts the
//! new edge at index `i + 1`; at the last vertex it goes to index `0`, so that
//! blowdown and blowup undo each other on edge lists exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::cohomology::{cr_betti, CrBettiTable};
use crate::lattice::{det2, unimodular_complement, LatticeInt, Vector2};
use crate::model::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::First => "first",
            Side::Second => "second",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NotAdmissible {
    NoSmoothEndpoint,
    NeighborsDependent,
    InequalityFails,
}

impl NotAdmissible {
    pub fn as_str(&self) -> &'static str {
        match self {
            NotAdmissible::NoSmoothEndpoint => "noSmoothEndpoint",
            NotAdmissible::NeighborsDependent => "neighborsDependent",
            NotAdmissible::InequalityFails => "inequalityFails",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BirationalError {
    #[error("blowdown not admissible: {}", .0.as_str())]
    NotAdmissible(NotAdmissible),
    #[error("model has {edges} edges; a blowdown needs at least 4")]
    TooFewEdges { edges: usize },
    #[error("index {index} out of range for a model with {len} edges")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("model is not positively omnioriented")]
    NotPositivelyOmnioriented,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowdownSite<I> {
    pub edge_index: usize,
    pub lambda1: Vector2<I>,
    pub lambda2: Vector2<I>,
    pub lambda3: Vector2<I>,
    pub smooth_side: Side,
    /// Order of the local group at the possibly singular endpoint of the edge.
    pub k: I,
    /// Order of the local group at the new vertex, `det[λ1, λ3]`.
    pub m: I,
}

impl<I: LatticeInt> BlowdownSite<I> {
    pub fn is_crepant(&self) -> bool {
        self.k.clone() + I::one() == self.m
    }

    /// Change of the total Chen-Ruan dimension under this blowdown:
    /// `m - (k + 1)`.
    pub fn cr_total_change(&self) -> I {
        self.m.clone() - self.k.clone() - I::one()
    }

    /// Index of the new vertex `w` in the blown-down model of `len - 1` edges.
    pub fn image_vertex(&self, len: usize) -> usize {
        if self.edge_index == 0 {
            len - 2
        } else {
            self.edge_index - 1
        }
    }
}

pub fn is_crepant<I: LatticeInt>(site: &BlowdownSite<I>) -> bool {
    site.is_crepant()
}

fn check_index<I: LatticeInt>(model: &Model<I>, index: usize) -> Result<(), BirationalError> {
    if index >= model.len() {
        return Err(BirationalError::IndexOutOfRange {
            index,
            len: model.len(),
        });
    }
    Ok(())
}

fn check_positive<I: LatticeInt>(model: &Model<I>) -> Result<(), BirationalError> {
    if model.is_positively_omnioriented() {
        Ok(())
    } else {
        Err(BirationalError::NotPositivelyOmnioriented)
    }
}

pub fn blowdown_site<I: LatticeInt>(model: &Model<I>, edge_index: usize) -> Result<BlowdownSite<I>, BirationalError> {
    check_index(model, edge_index)?;
    let n = model.len();
    if n < 4 {
        return Err(BirationalError::TooFewEdges { edges: n });
    }
    check_positive(model)?;
    let lambda1 = model.edge(edge_index + n - 1).clone();
    let lambda2 = model.edge(edge_index).clone();
    let lambda3 = model.edge(edge_index + 1).clone();
    let d12 = det2(&lambda1, &lambda2);
    let d23 = det2(&lambda2, &lambda3);
    let d13 = det2(&lambda1, &lambda3);
    if d13.is_zero() {
        return Err(BirationalError::NotAdmissible(NotAdmissible::NeighborsDependent));
    }
    let fits = |k: &I| k.is_positive() && *k <= d13;
    let side = if d12.is_one() && fits(&d23) {
        Some((Side::First, d23.clone()))
    } else if d23.is_one() && fits(&d12) {
        Some((Side::Second, d12.clone()))
    } else {
        None
    };
    match side {
        Some((smooth_side, k)) => Ok(BlowdownSite {
            edge_index,
            lambda1,
            lambda2,
            lambda3,
            smooth_side,
            k,
            m: d13,
        }),
        None if !d12.is_one() && !d23.is_one() => Err(BirationalError::NotAdmissible(NotAdmissible::NoSmoothEndpoint)),
        None => Err(BirationalError::NotAdmissible(NotAdmissible::InequalityFails)),
    }
}

/// Deletes the site's edge.
pub fn blowdown<I: LatticeInt>(model: &Model<I>, site: &BlowdownSite<I>) -> Model<I> {
    debug_assert_eq!(model.edge(site.edge_index), &site.lambda2);
    let mut edges = model.edges().to_vec();
    edges.remove(site.edge_index);
    Model::new(edges).expect("admissible blowdown yields a valid model")
}

/// Position the new edge takes when blowing up vertex `vertex` of an
/// `len`-edge model.
pub fn insertion_index(vertex: usize, len: usize) -> usize {
    if vertex + 1 == len {
        0
    } else {
        vertex + 1
    }
}

/// Result of inserting an edge at a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blowup<I> {
    pub model: Model<I>,
    pub inserted: Vector2<I>,
    pub edge_index: usize,
    /// Local group order at the new possibly singular vertex.
    pub k: I,
    /// Local group order at the vertex that was blown up.
    pub m: I,
}

impl<I: LatticeInt> Blowup<I> {
    pub fn is_crepant(&self) -> bool {
        self.k.clone() + I::one() == self.m
    }
}

/// Inserts the unique `λ2` between `λ1 = edge[v]` and `λ3 = edge[v+1]` with
/// `det[λ1, λ2] = 1` (side first) or `det[λ2, λ3] = 1` (side second) and the
/// other determinant in `[1, m]`.
pub fn blowup<I: LatticeInt>(model: &Model<I>, vertex: usize, side: Side) -> Result<Blowup<I>, BirationalError> {
    check_index(model, vertex)?;
    check_positive(model)?;
    let v = model.vertex(vertex);
    let (lambda1, lambda3, m) = (v.first, v.second, v.det);

    // All admissible λ2 form a line `base + t*dir`, along which the free
    // determinant moves in steps of m.
    let (base, dir) = match side {
        Side::First => (unimodular_complement(&lambda1).expect("primitive"), lambda1.clone()),
        Side::Second => (-unimodular_complement(&lambda3).expect("primitive"), lambda3.clone()),
    };
    let free_det = |w: &Vector2<I>| match side {
        Side::First => det2(w, &lambda3),
        Side::Second => det2(&lambda1, w),
    };
    let c0 = free_det(&base);
    let k = (c0.clone() - I::one()).mod_floor(&m) + I::one();
    let t = (k.clone() - c0) / m.clone();
    let inserted = base + dir.scale(&t);
    debug_assert_eq!(free_det(&inserted), k);

    let edge_index = insertion_index(vertex, model.len());
    let mut edges = model.edges().to_vec();
    edges.insert(edge_index, inserted.clone());
    let model = Model::new(edges).expect("blowup yields a valid model");
    Ok(Blowup {
        model,
        inserted,
        edge_index,
        k,
        m,
    })
}

/// A blowup at `vertex` whose inverse blowdown is crepant, if one exists.
pub fn crepant_blowup<I: LatticeInt>(model: &Model<I>, vertex: usize) -> Result<Option<Blowup<I>>, BirationalError> {
    for side in [Side::First, Side::Second] {
        let b = blowup(model, vertex, side)?;
        if b.is_crepant() {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution<I> {
    pub model: Model<I>,
    pub inserted: Vec<Vector2<I>>,
    /// One entry per insertion: `(k, m)` of the created site.
    pub steps: Vec<(I, I)>,
}

/// Repeated side-first blowups at the singular descendant of `vertex` until
/// it becomes smooth. Each step replaces order `m` by orders `1` and `k < m`.
pub fn resolve_vertex<I: LatticeInt>(model: &Model<I>, vertex: usize) -> Result<Resolution<I>, BirationalError> {
    check_index(model, vertex)?;
    check_positive(model)?;
    let mut current = model.clone();
    let mut index = vertex;
    let mut inserted = Vec::new();
    let mut steps = Vec::new();
    while !current.vertex(index).is_smooth() {
        let b = blowup(&current, index, Side::First)?;
        index = b.edge_index;
        inserted.push(b.inserted);
        steps.push((b.k, b.m));
        current = b.model;
    }
    Ok(Resolution {
        model: current,
        inserted,
        steps,
    })
}

/// Resolves every singular vertex, lowest index first.
pub fn resolve_all<I: LatticeInt>(model: &Model<I>) -> Result<Resolution<I>, BirationalError> {
    check_positive(model)?;
    let mut current = model.clone();
    let mut inserted = Vec::new();
    let mut steps = Vec::new();
    while let Some(v) = current.vertices().into_iter().find(|v| !v.is_smooth()) {
        let r = resolve_vertex(&current, v.index)?;
        inserted.extend(r.inserted);
        steps.extend(r.steps);
        current = r.model;
    }
    Ok(Resolution {
        model: current,
        inserted,
        steps,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McKayReport<I: LatticeInt> {
    pub table_x: CrBettiTable<I>,
    pub table_y: CrBettiTable<I>,
    pub equal: bool,
    /// `dim_X - dim_Y` at every degree where they differ.
    pub degreewise_diff: BTreeMap<Ratio<I>, i64>,
    pub total_diff: i64,
}

pub fn mckay_check<I: LatticeInt>(x: &Model<I>, y: &Model<I>) -> McKayReport<I> {
    let table_x = cr_betti(x);
    let table_y = cr_betti(y);
    let mut degreewise_diff = BTreeMap::new();
    for degree in table_x.entries.keys().chain(table_y.entries.keys()) {
        let diff = table_x.get(degree) as i64 - table_y.get(degree) as i64;
        if diff != 0 {
            degreewise_diff.insert(degree.clone(), diff);
        }
    }
    let total_diff = table_x.total() as i64 - table_y.total() as i64;
    McKayReport {
        equal: degreewise_diff.is_empty(),
        table_x,
        table_y,
        degreewise_diff,
        total_diff,
    }
}
