//! Newton polygons of coefficient families, the valuations of the reciprocal
//! zeroes they predict, and Newton-iteration refinement of simple roots.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::nonarch::LaurentSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewtonError {
    #[error("no coefficient is known to be nonzero")]
    AllCoefficientsVanish,
    #[error("derivative vanishes to the working precision; raise the coefficient precision")]
    DerivativeVanishesToPrecision,
    #[error("Newton iteration did not converge in {0} steps")]
    NoConvergence(usize),
    #[error("coefficients are not precise enough for target precision {0}")]
    InsufficientPrecision(i64),
    #[error("segment [{0}, {1}] is not a segment of length 1 of the polygon")]
    NotASimpleSegment(usize, usize),
}

/// What is known about the valuation of one coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "camelCase")]
pub enum CoeffValuation {
    /// Nonzero with this valuation.
    Finite(i64),
    /// Zero to the working precision: the valuation is at least this bound.
    AtLeast(i64),
    /// Exactly zero; contributes no point.
    Zero,
}

/// Lower convex hull of `(d, v(c_d))`.
///
/// Only finite points become vertices. A lower-bound point before the first
/// finite point, or strictly inside the span of the finite points and below
/// the hull, makes the polygon provisional. Lower-bound points past the last
/// finite point form an unresolved tail: a segment is certified when every
/// tail bound lies strictly above the line extending it, since only then can
/// no completion of the tail merge or remove it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NewtonPolygon {
    pub points: Vec<(usize, CoeffValuation)>,
    pub vertices: Vec<(usize, i64)>,
    pub provisional: bool,
    /// Lower-bound indices beyond the last finite point.
    pub unresolved_tail: Vec<usize>,
    /// Number of leading segments no tail completion can alter.
    pub certified_segments: usize,
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Hull value at `d` (between the first and last vertex), as a rational.
fn hull_at(vertices: &[(usize, i64)], d: usize) -> Ratio<i64> {
    let k = vertices.windows(2).position(|w| w[0].0 <= d && d <= w[1].0).unwrap_or(0);
    let (d1, v1) = vertices[k];
    if vertices.len() == 1 {
        return Ratio::from_integer(v1);
    }
    let (d2, v2) = vertices[k + 1];
    Ratio::from_integer(v1) + Ratio::new(v2 - v1, (d2 - d1) as i64) * Ratio::from_integer(d as i64 - d1 as i64)
}

impl NewtonPolygon {
    /// Builds the polygon of `sum_d c_d X^d` from the valuations `vals[d]`.
    pub fn new(vals: &[CoeffValuation]) -> Result<Self, NewtonError> {
        let points: Vec<(usize, CoeffValuation)> = vals.iter().copied().enumerate().filter(|(_, v)| *v != CoeffValuation::Zero).collect();
        let finite: Vec<(i64, i64)> = points
            .iter()
            .filter_map(|&(d, v)| match v {
                CoeffValuation::Finite(x) => Some((d as i64, x)),
                _ => None,
            })
            .collect();
        if finite.is_empty() {
            return Err(NewtonError::AllCoefficientsVanish);
        }
        // monotone chain, lower hull
        let mut hull: Vec<(i64, i64)> = Vec::new();
        for &pt in &finite {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
                hull.pop();
            }
            hull.push(pt);
        }
        let vertices: Vec<(usize, i64)> = hull.iter().map(|&(d, v)| (d as usize, v)).collect();
        let (first, last) = (vertices[0].0, vertices[vertices.len() - 1].0);
        let mut provisional = false;
        let mut unresolved_tail = Vec::new();
        let mut tail_bounds = Vec::new();
        for &(d, v) in &points {
            let CoeffValuation::AtLeast(bound) = v else { continue };
            if d > first && d < last {
                provisional |= Ratio::from_integer(bound) < hull_at(&vertices, d);
            } else if d > last {
                unresolved_tail.push(d);
                tail_bounds.push((d, bound));
            } else if d < first {
                provisional = true;
            }
        }
        let certified_segments = vertices
            .windows(2)
            .take_while(|w| {
                let ((d1, v1), (d2, v2)) = (w[0], w[1]);
                let slope = Ratio::new(v2 - v1, (d2 - d1) as i64);
                tail_bounds.iter().all(|&(d, b)| Ratio::from_integer(b) > Ratio::from_integer(v2) + slope * Ratio::from_integer((d - d2) as i64))
            })
            .count();
        let np = NewtonPolygon { points, vertices, provisional, unresolved_tail, certified_segments };
        debug_assert!(np.is_convex());
        Ok(np)
    }

    /// Slopes strictly increase along the vertices.
    pub fn is_convex(&self) -> bool {
        let slopes: Vec<Ratio<i64>> = self.vertices.windows(2).map(|w| Ratio::new(w[1].1 - w[0].1, (w[1].0 - w[0].0) as i64)).collect();
        slopes.windows(2).all(|w| w[0] < w[1])
    }
}

/// One segment: `length` reciprocal zeroes of valuation `-slope`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub slope: Ratio<i64>,
    pub length: usize,
    /// False when an unresolved tail could still merge or remove this segment.
    pub certified: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
    if r.is_integer() {
        s.serialize_str(&r.numer().to_string())
    } else {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }
}

impl Segment {
    /// `v(lambda) = -slope`.
    pub fn zero_valuation(&self) -> Ratio<i64> {
        -self.slope
    }

    /// `|lambda| = r^e`; returns `e`, which equals the slope.
    pub fn abs_exponent(&self) -> Ratio<i64> {
        self.slope
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ZeroSpectrum {
    pub segments: Vec<Segment>,
    pub provisional: bool,
}

impl ZeroSpectrum {
    pub fn certified_count(&self) -> usize {
        self.segments.iter().filter(|s| s.certified).count()
    }

    pub fn total_length(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }
}

pub fn zero_spectrum(np: &NewtonPolygon) -> ZeroSpectrum {
    let segments = np
        .vertices
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let length = w[1].0 - w[0].0;
            let certified = k < np.certified_segments;
            Segment { start: w[0].0, end: w[1].0, slope: Ratio::new(w[1].1 - w[0].1, length as i64), length, certified }
        })
        .collect();
    ZeroSpectrum { segments, provisional: np.provisional }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RhVerdict {
    /// Least index past which every segment has length 1.
    pub all_simple_beyond: usize,
    pub unique_abs_value: Vec<bool>,
    pub exceptions: Vec<Segment>,
}

impl RhVerdict {
    pub fn all_simple(&self) -> bool {
        self.exceptions.is_empty()
    }
}

pub fn rh_verdict(zs: &ZeroSpectrum) -> RhVerdict {
    let unique_abs_value = zs.segments.iter().map(|s| s.length == 1).collect();
    let exceptions: Vec<Segment> = zs.segments.iter().filter(|s| s.length > 1).cloned().collect();
    let all_simple_beyond = exceptions.last().map_or(0, |s| s.end);
    RhVerdict { all_simple_beyond, unique_abs_value, exceptions }
}

fn eval(coeffs: &[LaurentSeries], z: &LaurentSeries) -> LaurentSeries {
    let mut acc = coeffs.last().unwrap().clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(z).add(c);
    }
    acc
}

fn derivative(coeffs: &[LaurentSeries]) -> Vec<LaurentSeries> {
    coeffs.iter().enumerate().skip(1).map(|(d, c)| c.scale(c.field().from_int(d as i64))).collect()
}

/// The root of `P(z) = sum_d c_d z^d` belonging to the length-1 segment
/// starting at `start`, refined by `z <- z - P(z)/P'(z)` until
/// `v(P(z)) >= target`.
pub fn hensel_root(coeffs: &[LaurentSeries], start: usize, target: i64) -> Result<LaurentSeries, NewtonError> {
    let vals: Vec<CoeffValuation> = coeffs
        .iter()
        .map(|c| match (c.valuation(), c.precision()) {
            (Some(v), _) => CoeffValuation::Finite(v),
            (None, Some(m)) => CoeffValuation::AtLeast(m),
            (None, None) => CoeffValuation::Zero,
        })
        .collect();
    let np = NewtonPolygon::new(&vals)?;
    let seg = zero_spectrum(&np).segments.into_iter().find(|s| s.start == start && s.length == 1);
    let Some(seg) = seg else {
        return Err(NewtonError::NotASimpleSegment(start, start + 1));
    };
    let slope = *seg.slope.numer();
    // work well past the target so truncation noise stays below it
    let work = target + 2 * slope.abs() + 2 * coeffs.len() as i64 * slope.abs() + 8;
    let trunc: Vec<LaurentSeries> = coeffs.iter().map(|c| if c.is_exact() { c.truncate(work) } else { c.clone() }).collect();
    let deriv = derivative(&trunc);
    let lead = &trunc[start + 1];
    let mut z = trunc[start].neg().div(lead, Some(work)).map_err(|_| NewtonError::DerivativeVanishesToPrecision)?;
    let cap = (64 - (target.max(1) as u64).leading_zeros()) as usize + 2;
    for _ in 0..=cap {
        let pz = eval(&trunc, &z);
        let reached = match pz.valuation() {
            Some(v) => v >= target,
            None => pz.precision().is_none_or(|p| p >= target),
        };
        if reached {
            if pz.precision().is_some_and(|p| p < target) {
                return Err(NewtonError::InsufficientPrecision(target));
            }
            return Ok(z);
        }
        let dz = eval(&deriv, &z);
        if dz.valuation().is_none() {
            return Err(NewtonError::DerivativeVanishesToPrecision);
        }
        let step = pz.div(&dz, Some(work)).map_err(|_| NewtonError::DerivativeVanishesToPrecision)?;
        z = z.sub(&step);
        if z.precision().is_some_and(|p| p < target - slope.abs()) && pz.valuation().is_none() {
            return Err(NewtonError::InsufficientPrecision(target));
        }
    }
    Err(NewtonError::NoConvergence(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::{field_make, FqElem};
    use crate::nonarch::Place;
    use CoeffValuation::*;

    #[test]
    fn trivial_segment() {
        let np = NewtonPolygon::new(&[Finite(0), Finite(0)]).unwrap();
        let zs = zero_spectrum(&np);
        assert_eq!(zs.segments.len(), 1);
        assert_eq!(zs.segments[0].slope, Ratio::from_integer(0));
        assert!(rh_verdict(&zs).all_simple());
    }

    #[test]
    fn hull_drops_point_above() {
        let np = NewtonPolygon::new(&[Finite(0), Finite(2), Finite(3)]).unwrap();
        assert_eq!(np.vertices, vec![(0, 0), (2, 3)]);
        let zs = zero_spectrum(&np);
        assert_eq!(zs.segments[0].slope, Ratio::new(3, 2));
        assert_eq!(zs.segments[0].length, 2);
        let v = rh_verdict(&zs);
        assert_eq!(v.all_simple_beyond, 2);
        assert_eq!(v.exceptions.len(), 1);
    }

    #[test]
    fn spectrum_examples() {
        let zs = zero_spectrum(&NewtonPolygon::new(&[Finite(0), Finite(1)]).unwrap());
        assert_eq!(zs.segments[0].zero_valuation(), Ratio::from_integer(-1));
        assert_eq!(zs.segments[0].abs_exponent(), Ratio::from_integer(1));
        let two = zero_spectrum(&NewtonPolygon::new(&[Finite(0), Finite(1), Finite(3)]).unwrap());
        assert_eq!(two.segments.iter().map(|s| s.abs_exponent()).collect::<Vec<_>>(), vec![Ratio::from_integer(1), Ratio::from_integer(2)]);
        let lengths = zero_spectrum(&NewtonPolygon::new(&[Finite(0), Finite(1), Finite(3), Finite(5), Finite(7), Finite(10)]).unwrap());
        let v = rh_verdict(&lengths);
        assert_eq!(lengths.segments.iter().map(|s| s.length).collect::<Vec<_>>(), vec![1, 3, 1]);
        assert_eq!(v.all_simple_beyond, 4);
        assert_eq!(v.unique_abs_value, vec![true, false, true]);
    }

    #[test]
    fn provisional_rules() {
        let inner = NewtonPolygon::new(&[Finite(0), AtLeast(1), Finite(4)]).unwrap();
        assert!(inner.provisional);
        let harmless = NewtonPolygon::new(&[Finite(0), AtLeast(9), Finite(4)]).unwrap();
        assert!(!harmless.provisional);
        let tail = NewtonPolygon::new(&[Finite(0), Finite(1), AtLeast(64)]).unwrap();
        assert!(!tail.provisional);
        assert_eq!(tail.unresolved_tail, vec![2]);
        assert_eq!(tail.certified_segments, 1);
        let low_tail = NewtonPolygon::new(&[Finite(0), Finite(1), Finite(10), AtLeast(19)]).unwrap();
        assert!(!low_tail.provisional);
        assert_eq!(low_tail.certified_segments, 1);
        let spectrum = zero_spectrum(&low_tail);
        assert_eq!(spectrum.segments.iter().map(|s| s.certified).collect::<Vec<_>>(), vec![true, false]);
        assert!(NewtonPolygon::new(&[AtLeast(2), Finite(0), Finite(1)]).unwrap().provisional);
        assert!(matches!(NewtonPolygon::new(&[Zero, AtLeast(3)]), Err(NewtonError::AllCoefficientsVanish)));
    }

    #[test]
    fn exact_zeros_are_skipped() {
        let np = NewtonPolygon::new(&[Finite(0), Zero, Finite(2)]).unwrap();
        assert_eq!(np.vertices, vec![(0, 0), (2, 2)]);
        assert!(!np.provisional);
    }

    fn series(field: &crate::ffpoly::Field, val: i64, ints: &[i64]) -> LaurentSeries {
        let c = ints.iter().map(|&i| field.from_int(i)).collect();
        LaurentSeries::new(field, Place::Infinity, val, c, None)
    }

    #[test]
    fn linear_roots() {
        let f2 = field_make(2, 1, None).unwrap();
        let one = series(&f2, 0, &[1]);
        let z = hensel_root(&[one.clone(), one.clone()], 0, 20).unwrap();
        assert_eq!(z.coeffs(), &[FqElem::ONE]);
        assert_eq!(z.start(), 0);
        let pi = series(&f2, 1, &[1]);
        let z = hensel_root(&[one, pi], 0, 20).unwrap();
        assert_eq!(z.start(), -1);
        assert_eq!(z.coeffs(), &[FqElem::ONE]);
    }

    #[test]
    fn quadratic_root_residual() {
        // (1 + pi z)(1 + pi^3 z) over F_3 has roots of valuation -1 and -3
        let f3 = field_make(3, 1, None).unwrap();
        let coeffs = [series(&f3, 0, &[1]), series(&f3, 1, &[1, 0, 1]), series(&f3, 4, &[1])];
        for start in [0, 1] {
            let z = hensel_root(&coeffs, start, 30).unwrap();
            let res = eval(&coeffs, &z);
            assert!(res.valuation().is_none_or(|v| v >= 30));
            assert_eq!(z.start(), if start == 0 { -1 } else { -3 });
        }
    }
}
