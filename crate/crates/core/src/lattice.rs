//! Exact 2D lattice arithmetic over an arbitrary signed integer type.
//!
//! Everything above this module works with vectors of the lattice `N = Z^2`
//! and with exact rationals built on the same integer type. The default
//! instantiation at the crate root is [`num_bigint::BigInt`], so determinants
//! and Bézout coefficients can never overflow; machine integers work too when
//! the caller knows the entries stay small.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use thiserror::Error;

/// Integer scalar usable for lattice computations.
pub trait LatticeInt:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> LatticeInt for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("vector {0} is not primitive")]
    NotPrimitive(String),
}

/// A vector of the rank-2 lattice `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector2<I> {
    pub x: I,
    pub y: I,
}

impl<I: LatticeInt> Vector2<I> {
    pub fn new(x: I, y: I) -> Self {
        Self { x, y }
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(x: i64, y: i64) -> Self {
        Self {
            x: I::from_i64(x).expect("integer type cannot represent an i64 coordinate"),
            y: I::from_i64(y).expect("integer type cannot represent an i64 coordinate"),
        }
    }

    pub fn zero() -> Self {
        Self::new(I::zero(), I::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, t: &I) -> Self {
        Self::new(self.x.clone() * t.clone(), self.y.clone() * t.clone())
    }

    /// Pairing with a dual vector.
    pub fn dot(&self, other: &Self) -> I {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    /// Key used to pick a canonical representative: `(|x|, |y|, x, y)`.
    fn canonical_key(&self) -> (I, I, I, I) {
        (self.x.abs(), self.y.abs(), self.x.clone(), self.y.clone())
    }
}

impl<I: Display> Display for Vector2<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<I: LatticeInt> Add for Vector2<I> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<I: LatticeInt> Sub for Vector2<I> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<I: LatticeInt> Neg for Vector2<I> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<I: LatticeInt> Mul<I> for Vector2<I> {
    type Output = Self;
    fn mul(self, rhs: I) -> Self {
        Self::new(self.x * rhs.clone(), self.y * rhs)
    }
}

/// `det [u, v] = u.x * v.y - u.y * v.x`.
pub fn det2<I: LatticeInt>(u: &Vector2<I>, v: &Vector2<I>) -> I {
    u.x.clone() * v.y.clone() - u.y.clone() * v.x.clone()
}

/// `gcd(|x|, |y|) == 1`. The zero vector is not primitive.
pub fn is_primitive<I: LatticeInt>(v: &Vector2<I>) -> bool {
    v.x.gcd(&v.y).is_one()
}

/// The canonical `w` with `det2(u, w) == 1`.
///
/// All solutions form the line `w0 + t*u`; the representative returned is
/// the minimum of that line under the ordering `(|x|, |y|, x, y)`.
pub fn unimodular_complement<I: LatticeInt>(u: &Vector2<I>) -> Result<Vector2<I>, LatticeError> {
    if !is_primitive(u) {
        return Err(LatticeError::NotPrimitive(u.to_string()));
    }
    // a*ux + b*uy = g with g = +-1
    let egcd = u.x.extended_gcd(&u.y);
    let (mut a, mut b) = (egcd.x, egcd.y);
    if egcd.gcd.is_negative() {
        a = -a;
        b = -b;
    }
    // det2(u, (-b, a)) = ux*a + uy*b = 1
    let base = Vector2::new(-b, a);
    debug_assert!(det2(u, &base).is_one());

    // |x| is convex in t and minimal at floor/ceil of -base.x/u.x; if u.x = 0
    // the x-coordinate is constant and |y| decides. Ties in |x| only occur
    // between those same two candidates.
    let mut shifts: Vec<I> = Vec::with_capacity(4);
    for (b0, step) in [(&base.x, &u.x), (&base.y, &u.y)] {
        if !step.is_zero() {
            let num = -b0.clone();
            shifts.push(num.div_floor(step));
            shifts.push(div_ceil(&num, step));
        }
    }
    let best = shifts
        .into_iter()
        .map(|t| base.clone() + u.scale(&t))
        .min_by(|p, q| p.canonical_key().cmp(&q.canonical_key()))
        .expect("a primitive vector has a nonzero coordinate");
    Ok(best)
}

fn div_ceil<I: LatticeInt>(num: &I, den: &I) -> I {
    -((-num.clone()).div_floor(den))
}

/// Fractional part of a rational, in `[0, 1)`.
pub fn fract<I: LatticeInt>(r: &Ratio<I>) -> Ratio<I> {
    r - r.floor()
}

/// Smallest nonnegative residue of `a` modulo a positive `n`.
pub fn modulo<I: LatticeInt>(a: &I, n: &I) -> I {
    a.mod_floor(n)
}
