//! Exact two-dimensional integer linear algebra.
//!
//! Vectors of `Z^2`, determinants, primitive directions, determinant-one
//! maps and the normal form `cone{(1,0), (P,Q)}` of a strongly convex cone.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of the integer lattice `Z^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vector<T> {
    pub fn new(x: T, y: T) -> Self {
        Vector { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Vector::new(T::from_i64_exact(x), T::from_i64_exact(y))
    }

    pub fn zero() -> Self {
        Vector::new(T::zero(), T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, k: &T) -> Self {
        Vector::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    /// Non-negative gcd of the two coordinates.
    pub fn content(&self) -> T {
        self.x.gcd(&self.y)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }
}

impl<T: Scalar> Add for Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Self {
        Vector::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<'a, T: Scalar> Add<&'a Vector<T>> for &'a Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Vector<T> {
        Vector::new(
            self.x.clone() + rhs.x.clone(),
            self.y.clone() + rhs.y.clone(),
        )
    }
}

impl<T: Scalar> Sub for Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Self {
        Vector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<'a, T: Scalar> Sub<&'a Vector<T>> for &'a Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Vector<T> {
        Vector::new(
            self.x.clone() - rhs.x.clone(),
            self.y.clone() - rhs.y.clone(),
        )
    }
}

impl<T: Scalar> Neg for Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Self {
        Vector::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<T> for Vector<T> {
    type Output = Vector<T>;
    fn mul(self, k: T) -> Self {
        Vector::new(self.x * k.clone(), self.y * k)
    }
}

impl<T: fmt::Display> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// `u.x * v.y - u.y * v.x`.
pub fn det2<T: Scalar>(u: &Vector<T>, v: &Vector<T>) -> T {
    u.x.clone() * v.y.clone() - u.y.clone() * v.x.clone()
}

/// The primitive lattice vector on the ray through `v`.
pub fn primitive_part<T: Scalar>(v: &Vector<T>) -> Result<Vector<T>> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = v.content();
    Ok(Vector::new(v.x.clone() / g.clone(), v.y.clone() / g))
}

/// A row-major 2x2 integer matrix of determinant one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMap<T> {
    a: T,
    b: T,
    c: T,
    d: T,
}

impl<T: Scalar> UnimodularMap<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if !det.is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(UnimodularMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        UnimodularMap {
            a: T::one(),
            b: T::zero(),
            c: T::zero(),
            d: T::one(),
        }
    }

    /// Shear `(x, y) -> (x + k*y, y)`, which fixes `(1,0)`.
    pub fn shear(k: T) -> Self {
        UnimodularMap {
            a: T::one(),
            b: k,
            c: T::zero(),
            d: T::one(),
        }
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn apply(&self, v: &Vector<T>) -> Vector<T> {
        Vector::new(
            self.a.clone() * v.x.clone() + self.b.clone() * v.y.clone(),
            self.c.clone() * v.x.clone() + self.d.clone() * v.y.clone(),
        )
    }

    pub fn inverse(&self) -> Self {
        UnimodularMap {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&other.a, &other.b, &other.c, &other.d);
        UnimodularMap {
            a: a.clone() * e.clone() + b.clone() * g.clone(),
            b: a.clone() * f.clone() + b.clone() * h.clone(),
            c: c.clone() * e.clone() + d.clone() * g.clone(),
            d: c.clone() * f.clone() + d.clone() * h.clone(),
        }
    }
}

/// A two-dimensional strongly convex cone given by two ray generators.
///
/// The generators are stored as given; they need not be primitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone<T> {
    u: Vector<T>,
    v: Vector<T>,
}

impl<T: Scalar> Cone<T> {
    pub fn new(u: Vector<T>, v: Vector<T>) -> Result<Self> {
        if det2(&u, &v).is_zero() {
            return Err(Error::DegenerateCone);
        }
        Ok(Cone { u, v })
    }

    pub fn rays(&self) -> (&Vector<T>, &Vector<T>) {
        (&self.u, &self.v)
    }

    /// Primitive ray generators, ordered so that their determinant is positive.
    pub fn oriented_primitive_rays(&self) -> (Vector<T>, Vector<T>) {
        let u = primitive_part(&self.u).expect("cone rays are nonzero");
        let v = primitive_part(&self.v).expect("cone rays are nonzero");
        if det2(&u, &v).is_positive() {
            (u, v)
        } else {
            (v, u)
        }
    }

    /// `|det|` of the primitive rays: one exactly when the cone is smooth.
    pub fn index(&self) -> T {
        let (u, v) = self.oriented_primitive_rays();
        det2(&u, &v)
    }

    pub fn is_smooth(&self) -> bool {
        self.index().is_one()
    }

    /// Closed-cone membership.
    pub fn contains(&self, w: &Vector<T>) -> bool {
        let (u, v) = self.oriented_primitive_rays();
        !det2(&u, w).is_negative() && !det2(w, &v).is_negative()
    }
}

/// Normal form `cone{(1,0), (p,q)}` together with the map that produces it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm<T> {
    pub p: T,
    pub q: T,
    pub map: UnimodularMap<T>,
}

impl<T: Scalar> NormalForm<T> {
    pub fn is_smooth(&self) -> bool {
        self.q.is_one()
    }

    pub fn cone(&self) -> Cone<T> {
        Cone::new(
            Vector::new(T::one(), T::zero()),
            Vector::new(self.p.clone(), self.q.clone()),
        )
        .expect("normal form has q > 0")
    }
}

/// Maps a cone onto `cone{(1,0), (p,q)}` with `0 <= p < q` coprime.
///
/// The rays are oriented so that the first primitive ray can be sent to
/// `(1,0)` with the other landing in the upper half plane; a shear fixing
/// `(1,0)` then reduces its first coordinate modulo `q`.
pub fn normal_form<T: Scalar>(cone: &Cone<T>) -> NormalForm<T> {
    let (u, v) = cone.oriented_primitive_rays();
    let egcd = u.x.extended_gcd(&u.y);
    let (mut s, mut t) = (egcd.x, egcd.y);
    if egcd.gcd.is_negative() {
        s = -s;
        t = -t;
    }
    // Rows (s, t) and (-u.y, u.x): sends u to (1,0) and v to (s*v.x + t*v.y, det(u,v)).
    let to_axis = UnimodularMap::new(s, t, -u.y.clone(), u.x.clone())
        .expect("Bezout row and orthogonal row have determinant one");
    let image = to_axis.apply(&v);
    let q = image.y.clone();
    let k = image.x.div_floor(&q);
    let map = UnimodularMap::shear(-k).compose(&to_axis);
    let p = map.apply(&v).x;
    NormalForm { p, q, map }
}
