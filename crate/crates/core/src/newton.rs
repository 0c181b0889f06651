//! Newton polyhedron of the logarithmic Jacobian ideal of a toric surface.
//!
//! The ideal is generated by the monomials `v_j + v_k` over Hilbert-basis
//! pairs whose determinant does not vanish in the field's characteristic.
//! Its Newton polyhedron is `Conv(points) + cone`; each vertex gives one
//! chart of the (normalized) Nash blowup, and the chart's cone is the
//! localization of the polyhedron at that vertex.

use std::collections::BTreeSet;

use crate::cfrac::{convergents, hilbert_basis, ContinuedFraction, ConvergentTable};
use crate::error::{Error, Result};
use crate::lattice::{det2, primitive_part, Cone, Vector};
use crate::scalar::Scalar;

/// Characteristic of the ground field: zero or a prime.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Characteristic(u64);

impl Characteristic {
    pub const ZERO: Characteristic = Characteristic(0);

    pub fn new(p: i64) -> Result<Self> {
        let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if p == 0 || prime {
            Ok(Characteristic(p as u64))
        } else {
            Err(Error::InvalidCharacteristic(p.to_string()))
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Whether `d` stays nonzero after reduction modulo the characteristic.
    pub fn keeps<T: Scalar>(self, d: &T) -> bool {
        if self.0 == 0 {
            return !d.is_zero();
        }
        let p = T::from_u64(self.0).expect("characteristic fits the scalar type");
        !d.mod_floor(&p).is_zero()
    }
}

impl std::fmt::Display for Characteristic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Exponents `v_j + v_k` generating the logarithmic Jacobian ideal mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogJacobianGenerators<T> {
    pub char_p: Characteristic,
    pub points: BTreeSet<Vector<T>>,
}

pub fn log_jacobian_generators<T: Scalar>(
    basis: &[Vector<T>],
    char_p: Characteristic,
) -> LogJacobianGenerators<T> {
    let mut points = BTreeSet::new();
    for (j, vj) in basis.iter().enumerate() {
        for vk in &basis[j + 1..] {
            if char_p.keeps(&det2(vj, vk)) {
                points.insert(vj + vk);
            }
        }
    }
    LogJacobianGenerators { char_p, points }
}

/// Indices `i` (1-based, `1..=r`) whose sum `w_i = v_{i-1} + v_i` is a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonVertexSet<T> {
    pub indices: Vec<usize>,
    pub points: Vec<Vector<T>>,
}

impl<T> NewtonVertexSet<T> {
    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

/// Vertices by the continued-fraction criterion: an interior `w_i` is
/// dropped exactly when `a_i = a_{i+1} = 2`.
pub fn newton_vertices<T: Scalar>(cf: &ContinuedFraction<T>) -> NewtonVertexSet<T> {
    let r = cf.len();
    let two = T::one() + T::one();
    let table = convergents(cf);
    let indices: Vec<usize> = (1..=r)
        .filter(|&i| i == 1 || i == r || !(*cf.a(i) == two && *cf.a(i + 1) == two))
        .collect();
    let points = indices
        .iter()
        .map(|&i| table.vector(i - 1) + table.vector(i))
        .collect();
    NewtonVertexSet { indices, points }
}

/// Vertices of `Conv(points) + cone` in boundary order, from the vertex
/// supported by the first oriented ray of `cone` to the one supported by the
/// second.
///
/// The integer map `w -> (det(w, r2), det(r1, w))` has determinant
/// `det(r1, r2) > 0` and sends the cone onto the positive quadrant, so the
/// vertices are the corners of the lower-left convex staircase of the image.
pub fn newton_boundary<T: Scalar>(
    points: &BTreeSet<Vector<T>>,
    cone: &Cone<T>,
) -> Result<Vec<Vector<T>>> {
    if points.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let (r1, r2) = cone.oriented_primitive_rays();
    let mut image: Vec<((T, T), &Vector<T>)> = points
        .iter()
        .map(|w| ((det2(w, &r2), det2(&r1, w)), w))
        .collect();
    image.sort_by(|a, b| a.0.cmp(&b.0));

    // Pareto-minimal points: strictly decreasing second coordinate.
    let mut staircase: Vec<((T, T), &Vector<T>)> = Vec::new();
    for entry in image {
        if staircase.last().is_none_or(|last| entry.0 .1 < last.0 .1) {
            staircase.push(entry);
        }
    }

    let turn = |a: &(T, T), b: &(T, T), c: &(T, T)| {
        let (ux, uy) = (b.0.clone() - a.0.clone(), b.1.clone() - a.1.clone());
        let (vx, vy) = (c.0.clone() - b.0.clone(), c.1.clone() - b.1.clone());
        ux * vy - uy * vx
    };
    let mut hull: Vec<((T, T), &Vector<T>)> = Vec::new();
    for entry in staircase {
        while hull.len() >= 2
            && !turn(&hull[hull.len() - 2].0, &hull[hull.len() - 1].0, &entry.0).is_positive()
        {
            hull.pop();
        }
        hull.push(entry);
    }
    // Boundary order runs from the r2-supported end; reverse to start at r1.
    Ok(hull.into_iter().rev().map(|(_, w)| w.clone()).collect())
}

/// Vertex set of the Newton polyhedron, computed geometrically from its
/// generators.
pub fn newton_vertices_hull<T: Scalar>(
    generators: &LogJacobianGenerators<T>,
    cone: &Cone<T>,
) -> Result<BTreeSet<Vector<T>>> {
    Ok(newton_boundary(&generators.points, cone)?
        .into_iter()
        .collect())
}

/// Primitive generators of the localization cone at a Newton vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalizationCone<T> {
    pub vertex_index: usize,
    pub gen1: Vector<T>,
    pub gen2: Vector<T>,
    pub smooth: bool,
}

impl<T: Scalar> LocalizationCone<T> {
    fn new(vertex_index: usize, gen1: Vector<T>, gen2: Vector<T>) -> Self {
        let smooth = det2(&gen1, &gen2).abs().is_one();
        LocalizationCone {
            vertex_index,
            gen1,
            gen2,
            smooth,
        }
    }

    pub fn cone(&self) -> Cone<T> {
        Cone::new(self.gen1.clone(), self.gen2.clone())
            .expect("localization cone is two-dimensional")
    }
}

fn check_vertex<T: Scalar>(cf: &ContinuedFraction<T>, i: usize) -> Result<()> {
    if newton_vertices(cf).contains(i) {
        Ok(())
    } else {
        Err(Error::NotAVertex(i))
    }
}

/// `m*u - w` style combination `k1*a + k2*b`.
fn comb<T: Scalar>(k1: &T, a: &Vector<T>, k2: &T, b: &Vector<T>) -> Vector<T> {
    a.scale(k1) + b.scale(k2)
}

/// Primitive generators of the localization cone, read off from the parity
/// of the neighbouring terms rather than by dividing out a gcd.
pub fn localization_cone<T: Scalar>(
    cf: &ContinuedFraction<T>,
    i: usize,
) -> Result<LocalizationCone<T>> {
    check_vertex(cf, i)?;
    let r = cf.len();
    let t = convergents(cf);
    let v = |k: usize| t.vector(k);
    let one = T::one();
    let two = T::one() + T::one();

    // First generator from v_{i-2} - v_i (or its halved form), second from
    // v_{i+1} - v_{i-1}.
    let left = |ai: &T| -> Vector<T> {
        let (m, odd) = ai.div_rem(&two);
        if odd.is_zero() {
            comb(&one, &v(i - 2), &-m, &v(i - 1))
        } else {
            comb(&two, &v(i - 2), &-ai.clone(), &v(i - 1))
        }
    };
    let right = |anext: &T| -> Vector<T> {
        let (n, odd) = anext.div_rem(&two);
        if odd.is_zero() {
            comb(&n, &v(i), &-one.clone(), &v(i - 1))
        } else {
            comb(anext, &v(i), &-two.clone(), &v(i - 1))
        }
    };

    let (gen1, gen2) = if i == 1 {
        // v_2 - v_0 = (a_2 - 2, a_2).
        let a2 = cf.a(2);
        let (n, odd) = a2.div_rem(&two);
        let g = if odd.is_zero() {
            Vector::new(n.clone() - one.clone(), n)
        } else {
            Vector::new(a2.clone() - two.clone(), a2.clone())
        };
        (v(0), g)
    } else if i == r {
        (left(cf.a(r)), v(r))
    } else {
        (left(cf.a(i)), right(cf.a(i + 1)))
    };
    Ok(LocalizationCone::new(i, gen1, gen2))
}

/// Unprimitivized localization generators: `v_0, v_2 - v_0` at the first
/// vertex, `v_{r-2} - v_r, v_r` at the last, and
/// `v_{i-2} - v_i, v_{i+1} - v_{i-1}` in between.
pub fn localization_cone_raw<T: Scalar>(cf: &ContinuedFraction<T>, i: usize) -> Result<Cone<T>> {
    check_vertex(cf, i)?;
    let t = convergents(cf);
    let (u, w) = raw_generators(&t, i);
    Cone::new(u, w)
}

fn raw_generators<T: Scalar>(t: &ConvergentTable<T>, i: usize) -> (Vector<T>, Vector<T>) {
    let r = t.r();
    let v = |k: usize| t.vector(k);
    if i == 1 {
        (v(0), v(2) - v(0))
    } else if i == r {
        (v(r - 2) - v(r), v(r))
    } else {
        (v(i - 2) - v(i), v(i + 1) - v(i - 1))
    }
}

/// Localization cone with both raw generators divided by their content.
pub fn localization_cone_primitivized<T: Scalar>(
    cf: &ContinuedFraction<T>,
    i: usize,
) -> Result<LocalizationCone<T>> {
    let raw = localization_cone_raw(cf, i)?;
    let (u, w) = raw.rays();
    Ok(LocalizationCone::new(
        i,
        primitive_part(u)?,
        primitive_part(w)?,
    ))
}

/// The ambient cone `cone{(1,0), (P,Q)}` of the surface given by `cf`.
pub fn surface_cone<T: Scalar>(cf: &ContinuedFraction<T>) -> Cone<T> {
    let basis = hilbert_basis(cf);
    Cone::new(basis[0].clone(), basis[basis.len() - 1].clone()).expect("Q > 0")
}
