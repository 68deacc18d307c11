//! Local groups `G_v = N / N(v)` at the vertices of a model.
//!
//! An element is written `g = a1*λ + a2*μ` where `(λ, μ)` are the two
//! characteristic vectors meeting at the vertex (in clockwise order) and
//! `a1, a2` are rationals reduced into `[0, 1)`. On the vertex chart it acts by
//!
//! ```text
//! g · (z1, z2) = (exp(2πi·a2)·z1, exp(2πi·a1)·z2)
//! ```
//!
//! so the rotation weight on `z1` comes from `a2` and the weight on `z2`
//! from `a1`. Swapping these leaves the SL test unchanged but transposes the
//! singularity type `1/d(1, q)` into `1/d(1, q⁻¹)`.

use num_rational::Ratio;
use num_traits::Zero;

use crate::lattice::{fract, LatticeInt, Vector2};
use crate::model::{Model, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalGroupElement<I: LatticeInt> {
    pub a1: Ratio<I>,
    pub a2: Ratio<I>,
    /// Rotation weight on `z1`; equals `a2`.
    pub weight1: Ratio<I>,
    /// Rotation weight on `z2`; equals `a1`.
    pub weight2: Ratio<I>,
    /// Degree shifting number `weight1 + weight2`.
    pub age: Ratio<I>,
}

impl<I: LatticeInt> LocalGroupElement<I> {
    /// Builds the element from any representative pair; coefficients are
    /// reduced mod 1 first.
    pub fn new(a1: Ratio<I>, a2: Ratio<I>) -> Self {
        let a1 = fract(&a1);
        let a2 = fract(&a2);
        let age = &a1 + &a2;
        Self {
            weight1: a2.clone(),
            weight2: a1.clone(),
            a1,
            a2,
            age,
        }
    }

    pub fn identity() -> Self {
        Self::new(Ratio::zero(), Ratio::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero()
    }

    /// Group law: componentwise addition mod 1.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(&self.a1 + &other.a1, &self.a2 + &other.a2)
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.a1.clone(), -self.a2.clone())
    }

    /// `a1*first + a2*second`, which lies in `N` for group elements.
    pub fn representative(&self, first: &Vector2<I>, second: &Vector2<I>) -> (Ratio<I>, Ratio<I>) {
        let x = &self.a1 * Ratio::from_integer(first.x.clone()) + &self.a2 * Ratio::from_integer(second.x.clone());
        let y = &self.a1 * Ratio::from_integer(first.y.clone()) + &self.a2 * Ratio::from_integer(second.y.clone());
        (x, y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGroup<I: LatticeInt> {
    pub vertex: Vertex<I>,
    pub order: I,
    /// All elements, sorted by `(a1, a2)`; the identity comes first.
    pub elements: Vec<LocalGroupElement<I>>,
}

impl<I: LatticeInt> LocalGroup<I> {
    /// The element with `weight1 = 1/d`; `None` for the trivial group.
    pub fn generator(&self) -> Option<&LocalGroupElement<I>> {
        let target = Ratio::new(I::one(), self.order.clone());
        self.elements.iter().find(|g| !g.is_identity() && g.weight1 == target)
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &LocalGroupElement<I>> {
        self.elements.iter().filter(|g| !g.is_identity())
    }
}

/// Cyclic quotient type `1/d (1, q)`: the generator with weight `1/d` on
/// `z1` has weight `q/d` on `z2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingularityType<I> {
    pub order: I,
    pub weight: I,
}

/// Solves `a1*first + a2*second ∈ N` for `a2 = j/d`, returning the numerator
/// `i` of `a1 = i/d`.
///
/// Since `first` is primitive, `i*first ≡ 0 (mod d)` forces `i ≡ 0`, so the
/// solution is unique; a Bézout pair `(α, β)` for `first` recovers it as
/// `i ≡ -j(α·second.x + β·second.y)`.
fn solve_first_coefficient<I: LatticeInt>(vertex: &Vertex<I>, bezout: &(I, I), j: &I, d: &I) -> I {
    let (alpha, beta) = bezout;
    let s = alpha.clone() * vertex.second.x.clone() + beta.clone() * vertex.second.y.clone();
    let i = (-(j.clone() * s)).mod_floor(d);
    debug_assert!({
        let x = i.clone() * vertex.first.x.clone() + j.clone() * vertex.second.x.clone();
        let y = i.clone() * vertex.first.y.clone() + j.clone() * vertex.second.y.clone();
        x.is_multiple_of(d) && y.is_multiple_of(d)
    });
    i
}

fn bezout_of<I: LatticeInt>(v: &Vector2<I>) -> (I, I) {
    let e = v.x.extended_gcd(&v.y);
    if e.gcd.is_negative() {
        (-e.x, -e.y)
    } else {
        (e.x, e.y)
    }
}

/// Enumerates `G_v`. Exactly `|det|` elements, one for each `a2 ∈ {0, 1/d, ..}`.
pub fn local_group<I: LatticeInt>(vertex: &Vertex<I>) -> LocalGroup<I> {
    let d = vertex.order();
    let bezout = bezout_of(&vertex.first);
    let mut elements = Vec::new();
    let mut j = I::zero();
    while j < d {
        let i = solve_first_coefficient(vertex, &bezout, &j, &d);
        elements.push(LocalGroupElement::new(Ratio::new(i, d.clone()), Ratio::new(j.clone(), d.clone())));
        j = j + I::one();
    }
    elements.sort_by(|g, h| (&g.a1, &g.a2).cmp(&(&h.a1, &h.a2)));
    LocalGroup {
        vertex: vertex.clone(),
        order: d,
        elements,
    }
}

/// True iff every element acts with integral total weight, i.e. `G_v ⊂ SL(2, C)`.
pub fn is_sl<I: LatticeInt>(vertex: &Vertex<I>) -> bool {
    local_group(vertex).elements.iter().all(|g| g.age.is_integer())
}

pub fn singularity_type<I: LatticeInt>(vertex: &Vertex<I>) -> SingularityType<I> {
    let d = vertex.order();
    if d.is_one() {
        return SingularityType {
            order: d,
            weight: I::zero(),
        };
    }
    let weight = solve_first_coefficient(vertex, &bezout_of(&vertex.first), &I::one(), &d);
    SingularityType { order: d, weight }
}

/// A pair `(v, g)` with `g ≠ 1` in `G_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedSector<I: LatticeInt> {
    pub vertex: usize,
    pub element: LocalGroupElement<I>,
}

/// All twisted sectors ordered by vertex, then by `(a1, a2)`.
pub fn twisted_sectors<I: LatticeInt>(model: &Model<I>) -> Vec<TwistedSector<I>> {
    model
        .vertices()
        .iter()
        .flat_map(|v| {
            local_group(v)
                .elements
                .into_iter()
                .filter(|g| !g.is_identity())
                .map(move |element| TwistedSector {
                    vertex: v.index,
                    element,
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;
    use proptest::prelude::*;

    type R = Ratio<BigInt>;

    fn vtx(a: (i64, i64), b: (i64, i64)) -> Vertex<BigInt> {
        Vertex::new(0, Vector2::from_i64(a.0, a.1), Vector2::from_i64(b.0, b.1))
    }

    fn r(n: i64, d: i64) -> R {
        R::new(n.into(), d.into())
    }

    /// Independent oracle: scan the full d×d grid of coefficient pairs.
    fn grid(a: (i64, i64), b: (i64, i64)) -> Vec<(i64, i64, i64)> {
        let d = (a.0 * b.1 - a.1 * b.0).abs();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if (i * a.0 + j * b.0) % d == 0 && (i * a.1 + j * b.1) % d == 0 {
                    out.push((i, j, d));
                }
            }
        }
        out
    }

    #[test]
    fn trivial_group() {
        let g = local_group(&vtx((1, 0), (0, 1)));
        assert_eq!(g.order, BigInt::from(1));
        assert_eq!(g.elements, vec![LocalGroupElement::identity()]);
    }

    #[test]
    fn order_two() {
        let g = local_group(&vtx((1, 0), (-1, 2)));
        assert_eq!(g.elements.len(), 2);
        let h = &g.elements[1];
        assert_eq!((h.a1.clone(), h.a2.clone()), (r(1, 2), r(1, 2)));
        assert_eq!((h.weight1.clone(), h.weight2.clone()), (r(1, 2), r(1, 2)));
        assert_eq!(h.age, r(1, 1));
    }

    #[test]
    fn order_three() {
        let g = local_group(&vtx((1, 0), (2, 3)));
        let ages: Vec<_> = g.nontrivial().map(|h| (h.a1.clone(), h.a2.clone(), h.age.clone())).collect();
        assert_eq!(ages, vec![(r(1, 3), r(1, 3), r(2, 3)), (r(2, 3), r(2, 3), r(4, 3))]);
    }

    #[test]
    fn sl_examples() {
        assert!(is_sl(&vtx((1, 0), (-2, 3))));
        assert!(!is_sl(&vtx((1, 0), (2, 3))));
        assert!(is_sl(&vtx((1, 0), (0, 1))));
    }

    #[test]
    fn singularity_type_examples() {
        let t = |a, b| {
            let s = singularity_type(&vtx(a, b));
            (i64::try_from(&s.order).unwrap(), i64::try_from(&s.weight).unwrap())
        };
        assert_eq!(t((1, 0), (-1, 2)), (2, 1));
        assert_eq!(t((1, 0), (2, 3)), (3, 1));
        assert_eq!(t((1, 0), (-2, 3)), (3, 2));
        assert_eq!(t((1, 0), (0, 1)), (1, 0));
        // weight on z1 comes from the second vector: transposing the pair
        // inverts q mod d
        assert_eq!(t((1, 0), (-2, 5)), (5, 2));
        assert_eq!(t((-2, 5), (1, 0)).0, 5);
    }

    #[test]
    fn twisted_sector_examples() {
        let x = Model::<BigInt>::from_i64(&[(1, 0), (0, 1), (-1, 2), (-2, 3), (1, -2), (0, 1), (-1, -1)]).unwrap();
        assert!(twisted_sectors(&x).is_empty());

        let y = Model::<BigInt>::from_i64(&[(1, 0), (-1, 2), (-2, 3), (1, -2), (0, 1), (-1, -1)]).unwrap();
        let s = twisted_sectors(&y);
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].vertex, s[0].element.age.clone()), (0, r(1, 1)));

        let t = Model::<BigInt>::from_i64(&[(1, 0), (2, 3), (-1, -1)]).unwrap();
        let ages: Vec<_> = twisted_sectors(&t).into_iter().map(|s| (s.vertex, s.element.age)).collect();
        assert_eq!(ages, vec![(0, r(2, 3)), (0, r(4, 3))]);
    }

    #[test]
    fn negative_det_uses_absolute_order() {
        let g = local_group(&vtx((2, 3), (1, 0)));
        assert_eq!(g.elements.len(), 3);
    }

    fn primitive_pair() -> impl Strategy<Value = ((i64, i64), (i64, i64))> {
        let c = -12i64..=12;
        (c.clone(), c.clone(), c.clone(), c).prop_filter_map("primitive independent pair", |(a, b, c, d)| {
            let p = Vector2::<BigInt>::from_i64(a, b);
            let q = Vector2::<BigInt>::from_i64(c, d);
            (crate::lattice::is_primitive(&p) && crate::lattice::is_primitive(&q) && a * d - b * c != 0)
                .then_some(((a, b), (c, d)))
        })
    }

    proptest! {
        #[test]
        fn matches_grid_oracle((a, b) in primitive_pair()) {
            let g = local_group(&vtx(a, b));
            let expect: Vec<_> = grid(a, b).into_iter().map(|(i, j, d)| (r(i, d), r(j, d))).collect();
            let got: Vec<_> = g.elements.iter().map(|e| (e.a1.clone(), e.a2.clone())).collect();
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn group_is_cyclic_with_paired_ages((a, b) in primitive_pair()) {
            let g = local_group(&vtx(a, b));
            let d = g.elements.len();
            if d == 1 {
                return Ok(());
            }
            let gen = g.generator().expect("generator").clone();
            let mut acc = LocalGroupElement::identity();
            let mut seen = std::collections::BTreeSet::new();
            for _ in 0..d {
                acc = acc.compose(&gen);
                seen.insert((acc.a1.clone(), acc.a2.clone()));
            }
            prop_assert!(acc.is_identity());
            prop_assert_eq!(seen.len(), d);
            for h in g.nontrivial() {
                prop_assert!(h.age > R::zero() && h.age < r(2, 1));
                prop_assert_eq!(&h.age + &h.inverse().age, r(2, 1));
                prop_assert!(!h.a1.is_zero() && !h.a2.is_zero());
                let (x, y) = h.representative(&Vector2::from_i64(a.0, a.1), &Vector2::from_i64(b.0, b.1));
                prop_assert!(x.is_integer() && y.is_integer());
            }
        }

        #[test]
        fn sl_iff_type_d_minus_one((a, b) in primitive_pair()) {
            let v = vtx(a, b);
            let t = singularity_type(&v);
            if t.order > BigInt::one() {
                prop_assert_eq!(is_sl(&v), t.weight == &t.order - BigInt::one());
            } else {
                prop_assert!(is_sl(&v));
            }
        }
    }
}
