//! Affine charts of the normalized and non-normalized Nash blowups.
//!
//! A normalized chart is a localization cone and is smooth when its
//! primitive generators have determinant one. A non-normalized chart is the
//! semigroup generated by `{v_{i-1}, v_i} ∪ A(v_{i-1}) ∪ A(v_i)`; deciding
//! its smoothness needs exact semigroup membership, which is provided by
//! [`AffineSemigroup`].

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};

use crate::cfrac::{convergents, hilbert_basis, hj_expand, ContinuedFraction};
use crate::error::{Error, Result};
use crate::lattice::{det2, normal_form, primitive_part, Cone, Vector};
use crate::newton::{localization_cone, LocalizationCone};
use crate::scalar::Scalar;

/// Residue tables for the one-dimensional case are indexed by machine words.
const MAX_RAY_MODULUS: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedChart<T> {
    pub cone: LocalizationCone<T>,
}

pub fn normalized_chart_is_smooth<T: Scalar>(c: &LocalizationCone<T>) -> bool {
    det2(&c.gen1, &c.gen2).abs().is_one()
}

/// A finitely generated submonoid of `Z^2` contained in a pointed cone,
/// preprocessed for exact membership queries.
///
/// In the two-dimensional case let `u1`, `u2` be generators on the two
/// boundary rays. Every element is `m + a*u1 + b*u2` with `a, b >= 0` and
/// `m` minimal in its class modulo the lattice spanned by `u1, u2`. The
/// minimal elements are finitely many and are found by a best-first search
/// ordered by a linear functional that is positive on the cone.
#[derive(Clone, Debug)]
pub struct AffineSemigroup<T> {
    generators: Vec<Vector<T>>,
    shape: Shape<T>,
}

#[derive(Clone, Debug)]
enum Shape<T> {
    Trivial,
    Ray {
        direction: Vector<T>,
        modulus: T,
        /// Smallest element of each residue class modulo `modulus`.
        apery: Vec<Option<T>>,
    },
    Planar {
        u1: Vector<T>,
        u2: Vector<T>,
        index: T,
        minimal: HashMap<(T, T), Vec<Vector<T>>>,
    },
}

impl<T: Scalar> AffineSemigroup<T> {
    pub fn new(generators: &[Vector<T>]) -> Result<Self> {
        let mut gens: Vec<Vector<T>> = Vec::new();
        for g in generators {
            if !g.is_zero() && !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        let shape = if gens.is_empty() {
            Shape::Trivial
        } else {
            build_shape(&gens)?
        };
        Ok(AffineSemigroup {
            generators: gens,
            shape,
        })
    }

    pub fn generators(&self) -> &[Vector<T>] {
        &self.generators
    }

    /// Index of the sublattice spanned by the two boundary generators, or
    /// the smallest generator multiple on a ray. Any cone point times this
    /// index is in the semigroup.
    pub fn boundary_index(&self) -> Option<T> {
        match &self.shape {
            Shape::Trivial => None,
            Shape::Ray { modulus, .. } => Some(modulus.clone()),
            Shape::Planar { index, .. } => Some(index.clone()),
        }
    }

    pub fn contains(&self, target: &Vector<T>) -> bool {
        if target.is_zero() {
            return true;
        }
        match &self.shape {
            Shape::Trivial => false,
            Shape::Ray {
                direction,
                modulus,
                apery,
            } => {
                let Some(k) = ray_multiple(direction, target) else {
                    return false;
                };
                let residue = k
                    .mod_floor(modulus)
                    .to_usize()
                    .expect("residue below modulus");
                apery[residue].as_ref().is_some_and(|least| *least <= k)
            }
            Shape::Planar {
                u1,
                u2,
                index,
                minimal,
            } => {
                if det2(u1, target).is_negative() || det2(target, u2).is_negative() {
                    return false;
                }
                let key = coset_key(target, u1, u2, index);
                minimal
                    .get(&key)
                    .is_some_and(|ms| ms.iter().any(|m| dominates(m, target, u1, u2)))
            }
        }
    }
}

/// `k` with `target = k * direction`, `k >= 0`, if there is one.
fn ray_multiple<T: Scalar>(direction: &Vector<T>, target: &Vector<T>) -> Option<T> {
    if !det2(direction, target).is_zero() || direction.dot(target).is_negative() {
        return None;
    }
    // direction is primitive, so target is an integer multiple of it.
    let k = if direction.x.is_zero() {
        target.y.clone() / direction.y.clone()
    } else {
        target.x.clone() / direction.x.clone()
    };
    Some(k)
}

fn coset_key<T: Scalar>(w: &Vector<T>, u1: &Vector<T>, u2: &Vector<T>, index: &T) -> (T, T) {
    (det2(w, u2).mod_floor(index), det2(u1, w).mod_floor(index))
}

/// `target - m` is a nonnegative combination of `u1, u2` (same coset assumed).
fn dominates<T: Scalar>(m: &Vector<T>, target: &Vector<T>, u1: &Vector<T>, u2: &Vector<T>) -> bool {
    let diff = target - m;
    !det2(&diff, u2).is_negative() && !det2(u1, &diff).is_negative()
}

fn build_shape<T: Scalar>(gens: &[Vector<T>]) -> Result<Shape<T>> {
    // u1: every generator lies counterclockwise of it; u2: clockwise.
    let pick = |first: bool| {
        gens.iter()
            .filter(|g| {
                gens.iter().all(|h| {
                    let d = if first { det2(g, h) } else { det2(h, g) };
                    !d.is_negative()
                })
            })
            .min_by(|a, b| a.content().cmp(&b.content()).then(a.cmp(b)))
            .cloned()
    };
    let (u1, u2) = match (pick(true), pick(false)) {
        (Some(u1), Some(u2)) => (u1, u2),
        _ => return Err(Error::Unpointed),
    };
    let index = det2(&u1, &u2);
    if index.is_positive() {
        return Ok(planar_shape(gens, u1, u2, index));
    }
    if index.is_negative() {
        return Err(Error::Unpointed);
    }
    let direction = primitive_part(&u1)?;
    let multiples: Option<Vec<T>> = gens.iter().map(|g| ray_multiple(&direction, g)).collect();
    let Some(multiples) = multiples else {
        return Err(Error::Unpointed);
    };
    ray_shape(direction, multiples)
}

fn ray_shape<T: Scalar>(direction: Vector<T>, multiples: Vec<T>) -> Result<Shape<T>> {
    let modulus = multiples.iter().min().expect("nonempty").clone();
    let m = modulus
        .to_usize()
        .filter(|&m| m <= MAX_RAY_MODULUS)
        .ok_or_else(|| Error::TooLarge(modulus.to_string()))?;
    let mut apery: Vec<Option<T>> = vec![None; m];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(T::zero()));
    while let Some(Reverse(k)) = heap.pop() {
        let residue = k
            .mod_floor(&modulus)
            .to_usize()
            .expect("residue below modulus");
        if apery[residue].is_some() {
            continue;
        }
        apery[residue] = Some(k.clone());
        for c in &multiples {
            heap.push(Reverse(k.clone() + c.clone()));
        }
    }
    Ok(Shape::Ray {
        direction,
        modulus,
        apery,
    })
}

fn planar_shape<T: Scalar>(gens: &[Vector<T>], u1: Vector<T>, u2: Vector<T>, index: T) -> Shape<T> {
    let others: Vec<&Vector<T>> = gens.iter().filter(|g| **g != u1 && **g != u2).collect();
    // Positive on the cone minus the origin.
    let weight = |w: &Vector<T>| det2(&u1, w) + det2(w, &u2);
    let mut minimal: HashMap<(T, T), Vec<Vector<T>>> = HashMap::new();
    let mut seen: HashSet<Vector<T>> = HashSet::new();
    let mut heap = BinaryHeap::new();
    let origin = Vector::zero();
    seen.insert(origin.clone());
    heap.push(Reverse((weight(&origin), origin)));
    while let Some(Reverse((_, w))) = heap.pop() {
        let key = coset_key(&w, &u1, &u2, &index);
        let class = minimal.entry(key).or_default();
        if class.iter().any(|m| dominates(m, &w, &u1, &u2)) {
            continue;
        }
        class.push(w.clone());
        for g in &others {
            let next = &w + *g;
            if seen.insert(next.clone()) {
                heap.push(Reverse((weight(&next), next)));
            }
        }
    }
    Shape::Planar {
        u1,
        u2,
        index,
        minimal,
    }
}

/// Whether `target` is a nonnegative integer combination of `generators`.
pub fn member<T: Scalar>(target: &Vector<T>, generators: &[Vector<T>]) -> Result<bool> {
    Ok(AffineSemigroup::new(generators)?.contains(target))
}

/// Removes generators that are combinations of the remaining ones until
/// none is, scanning in the given order.
pub fn minimal_generators<T: Scalar>(generators: &[Vector<T>]) -> Result<Vec<Vector<T>>> {
    let mut current: Vec<Vector<T>> = Vec::new();
    for g in generators {
        if !g.is_zero() && !current.contains(g) {
            current.push(g.clone());
        }
    }
    loop {
        let mut changed = false;
        let mut k = 0;
        while k < current.len() {
            let rest: Vec<Vector<T>> = current
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, g)| g.clone())
                .collect();
            if member(&current[k], &rest)? {
                current.remove(k);
                changed = true;
            } else {
                k += 1;
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}

/// One chart of the (characteristic zero) Nash blowup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupChart<T> {
    pub vertex_index: usize,
    pub raw_generators: BTreeSet<Vector<T>>,
    pub minimal_generators: BTreeSet<Vector<T>>,
    pub ambient_cone: Cone<T>,
    pub localization: LocalizationCone<T>,
}

pub fn semigroup_chart<T: Scalar>(
    cf: &ContinuedFraction<T>,
    i: usize,
) -> Result<SemigroupChart<T>> {
    let localization = localization_cone(cf, i)?;
    let table = convergents(cf);
    let r = cf.len();
    let (prev, cur) = (table.vector(i - 1), table.vector(i));
    let mut raw = BTreeSet::new();
    raw.insert(prev.clone());
    raw.insert(cur.clone());
    for j in (0..=r).filter(|&j| j != i - 1 && j != i) {
        let vj = table.vector(j);
        // Determinants of distinct basis vectors never vanish, so the
        // characteristic zero A-sets contain every difference.
        raw.insert(&vj - &prev);
        raw.insert(&vj - &cur);
    }
    let ambient_cone = localization.cone();
    if let Some(g) = raw.iter().find(|g| !ambient_cone.contains(g)) {
        return Err(Error::Invariant(format!(
            "chart generator {g} outside the localization cone at {i}"
        )));
    }
    let ordered: Vec<Vector<T>> = raw.iter().cloned().collect();
    let minimal_generators = minimal_generators(&ordered)?.into_iter().collect();
    Ok(SemigroupChart {
        vertex_index: i,
        raw_generators: raw,
        minimal_generators,
        ambient_cone,
        localization,
    })
}

impl<T: Scalar> SemigroupChart<T> {
    pub fn semigroup(&self) -> AffineSemigroup<T> {
        let gens: Vec<Vector<T>> = self.minimal_generators.iter().cloned().collect();
        AffineSemigroup::new(&gens).expect("chart generators lie in a pointed cone")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationReport<T> {
    pub saturated: bool,
    pub witness: Option<Vector<T>>,
    pub witness_multiple: Option<T>,
}

/// Hilbert basis of the lattice points of a two-dimensional cone, through
/// its normal form.
pub fn cone_hilbert_basis<T: Scalar>(cone: &Cone<T>) -> Vec<Vector<T>> {
    let nf = normal_form(cone);
    let back = nf.map.inverse();
    let basis = if nf.is_smooth() {
        vec![
            Vector::new(T::one(), T::zero()),
            Vector::new(T::zero(), T::one()),
        ]
    } else {
        let cf = hj_expand(&nf.p, &nf.q).expect("normal form of a singular cone");
        hilbert_basis(&cf)
    };
    basis.iter().map(|h| back.apply(h)).collect()
}

pub fn is_saturated<T: Scalar>(chart: &SemigroupChart<T>) -> SaturationReport<T> {
    let semigroup = chart.semigroup();
    let basis = cone_hilbert_basis(&chart.ambient_cone);
    let Some(witness) = basis.into_iter().find(|h| !semigroup.contains(h)) else {
        return SaturationReport {
            saturated: true,
            witness: None,
            witness_multiple: None,
        };
    };
    let cap = semigroup.boundary_index().unwrap_or_else(T::one);
    let mut k = T::one() + T::one();
    let mut witness_multiple = None;
    while k <= cap {
        if semigroup.contains(&witness.scale(&k)) {
            witness_multiple = Some(k);
            break;
        }
        k = k + T::one();
    }
    SaturationReport {
        saturated: false,
        witness: Some(witness),
        witness_multiple,
    }
}

/// Smooth exactly when the semigroup is free on two generators of
/// determinant one.
pub fn nash_chart_is_smooth<T: Scalar>(chart: &SemigroupChart<T>) -> bool {
    let gens: Vec<&Vector<T>> = chart.minimal_generators.iter().collect();
    gens.len() == 2 && det2(gens[0], gens[1]).abs().is_one()
}

/// Both smoothness routes for a semigroup chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NashSmoothness<T> {
    pub by_generators: bool,
    pub by_saturation: bool,
    pub saturation: SaturationReport<T>,
}

impl<T> NashSmoothness<T> {
    pub fn agree(&self) -> bool {
        self.by_generators == self.by_saturation
    }
}

/// Free-on-two-generators verdict next to the saturated-and-normalization
/// smooth verdict.
pub fn nash_chart_smoothness<T: Scalar>(chart: &SemigroupChart<T>) -> NashSmoothness<T> {
    let saturation = is_saturated(chart);
    NashSmoothness {
        by_generators: nash_chart_is_smooth(chart),
        by_saturation: saturation.saturated && normalized_chart_is_smooth(&chart.localization),
        saturation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Cf = ContinuedFraction<i64>;

    fn cf(terms: &[i64]) -> Cf {
        Cf::from_i64(terms).unwrap()
    }

    fn v(x: i64, y: i64) -> Vector<i64> {
        Vector::new(x, y)
    }

    fn set(points: &[(i64, i64)]) -> BTreeSet<Vector<i64>> {
        points.iter().map(|&(x, y)| v(x, y)).collect()
    }

    /// Exhaustive search over coefficient vectors, bounded through a
    /// functional that is positive on every generator.
    fn member_bruteforce(target: Vector<i64>, gens: &[Vector<i64>], weight: Vector<i64>) -> bool {
        fn go(t: Vector<i64>, gens: &[Vector<i64>], weight: &Vector<i64>, from: usize) -> bool {
            if t.is_zero() {
                return true;
            }
            if t.dot(weight) <= 0 {
                return false;
            }
            (from..gens.len()).any(|k| go(t.clone() - gens[k].clone(), gens, weight, k))
        }
        assert!(gens.iter().all(|g| g.dot(&weight) > 0));
        go(target, gens, &weight, 0)
    }

    #[test]
    fn normalized_smoothness_examples() {
        let l = |a, b| LocalizationCone {
            vertex_index: 1,
            gen1: a,
            gen2: b,
            smooth: false,
        };
        assert!(normalized_chart_is_smooth(&l(v(0, -1), v(1, 3))));
        assert!(!normalized_chart_is_smooth(&l(v(1, 0), v(1, 2))));
        assert!(normalized_chart_is_smooth(&l(v(1, 0), v(0, 1))));
    }

    #[test]
    fn member_examples() {
        let gens = [v(0, -1), v(1, 2), v(2, 6)];
        assert!(!member(&v(1, 3), &gens).unwrap());
        assert!(member(&v(2, 6), &gens).unwrap());
        assert!(member(&v(1, 0), &gens).unwrap());
        assert!(member(&v(0, 0), &gens).unwrap());
        assert!(!member(&v(-1, 0), &gens).unwrap());
        assert!(member(&(v(2, 6) * 3 + v(1, 2)), &gens).unwrap());
    }

    #[test]
    fn member_rejects_unpointed_generators() {
        assert_eq!(
            member(&v(1, 1), &[v(1, 0), v(-1, 0), v(0, 1)]),
            Err(Error::Unpointed)
        );
        assert_eq!(
            member(&v(1, 1), &[v(1, 0), v(-1, 0)]),
            Err(Error::Unpointed)
        );
        assert_eq!(
            member(&v(1, 1), &[v(1, 0), v(0, 1), v(-1, -1)]),
            Err(Error::Unpointed)
        );
    }

    #[test]
    fn member_on_a_ray() {
        let gens = [v(0, 3), v(0, 5)];
        let expected = [
            true, false, false, true, false, true, true, false, true, true, true,
        ];
        for (k, want) in expected.iter().enumerate() {
            assert_eq!(member(&v(0, k as i64), &gens).unwrap(), *want, "k = {k}");
        }
        assert!(!member(&v(0, -3), &gens).unwrap());
        assert!(!member(&v(1, 3), &gens).unwrap());
        assert!(member(&v(0, 0), &[]).unwrap());
        assert!(!member(&v(0, 1), &[]).unwrap());
    }

    #[test]
    fn member_agrees_with_bruteforce() {
        let families: [(&[Vector<i64>], Vector<i64>); 3] = [
            (&[v(0, -1), v(1, 2), v(2, 6)], v(6, -1)),
            (&[v(3, 1), v(1, 3), v(2, 2), v(5, 0)], v(1, 1)),
            (&[v(2, 0), v(0, 2), v(3, 3), v(1, 4)], v(1, 1)),
        ];
        for (gens, weight) in families {
            let semigroup = AffineSemigroup::new(gens).unwrap();
            for x in -4..=14 {
                for y in -8..=14 {
                    let t = v(x, y);
                    if t.dot(&weight) > 40 {
                        continue;
                    }
                    assert_eq!(
                        semigroup.contains(&t),
                        member_bruteforce(t.clone(), gens, weight.clone()),
                        "{t}"
                    );
                }
            }
        }
    }

    #[test]
    fn chart_examples() {
        let c = cf(&[1, 2, 4, 2]);
        let chart = semigroup_chart(&c, 2).unwrap();
        assert_eq!(chart.minimal_generators, set(&[(0, -1), (1, 2), (2, 6)]));
        assert!(chart.raw_generators.is_superset(&set(&[
            (0, -1),
            (2, 6),
            (4, 11),
            (0, -2),
            (2, 5)
        ])));

        let chart = semigroup_chart(&cf(&[1, 2]), 1).unwrap();
        assert_eq!(chart.raw_generators, set(&[(1, 0), (1, 1), (0, 2), (0, 1)]));
        assert_eq!(chart.minimal_generators, set(&[(1, 0), (0, 1)]));

        let chart = semigroup_chart(&cf(&[1, 2, 3, 2]), 2).unwrap();
        assert_eq!(chart.minimal_generators, set(&[(0, -1), (1, 4)]));
        assert!(member_bruteforce(v(1, 3), &[v(0, -1), v(1, 4)], v(5, -1)));
        assert!(member_bruteforce(v(1, 2), &[v(0, -1), v(1, 4)], v(5, -1)));

        assert_eq!(
            semigroup_chart(&cf(&[1, 2, 2, 2]), 2),
            Err(Error::NotAVertex(2))
        );
    }

    #[test]
    fn minimal_generators_ignore_order() {
        for terms in [&[1, 2, 4, 2][..], &[1, 3, 5, 2, 4], &[1, 2, 6, 3]] {
            let c = cf(terms);
            for i in crate::newton::newton_vertices(&c).indices {
                let chart = semigroup_chart(&c, i).unwrap();
                let reversed: Vec<_> = chart.raw_generators.iter().rev().cloned().collect();
                let again: BTreeSet<_> =
                    minimal_generators(&reversed).unwrap().into_iter().collect();
                assert_eq!(again, chart.minimal_generators);
            }
        }
    }

    #[test]
    fn saturation_examples() {
        let chart = semigroup_chart(&cf(&[1, 2, 4, 2]), 2).unwrap();
        let report = is_saturated(&chart);
        assert_eq!(
            report,
            SaturationReport {
                saturated: false,
                witness: Some(v(1, 3)),
                witness_multiple: Some(2)
            }
        );
        assert!(!nash_chart_is_smooth(&chart));
        assert!(nash_chart_smoothness(&chart).agree());

        let chart = semigroup_chart(&cf(&[1, 2, 3, 2]), 2).unwrap();
        assert!(is_saturated(&chart).saturated);
        assert!(nash_chart_is_smooth(&chart));

        let chart = semigroup_chart(&cf(&[1, 2]), 1).unwrap();
        assert!(is_saturated(&chart).saturated);
        assert!(nash_chart_is_smooth(&chart));
    }

    #[test]
    fn cone_hilbert_basis_of_a_rotated_cone() {
        let cone = Cone::new(v(0, -1), v(2, 5)).unwrap();
        let basis: BTreeSet<_> = cone_hilbert_basis(&cone).into_iter().collect();
        assert_eq!(basis, set(&[(0, -1), (1, 2), (2, 5)]));
    }
}
