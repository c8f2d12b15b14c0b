//! Newton polygons and the Eisenstein-Dumas irreducibility criterion.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intpoly::{dyadic_valuation, IntPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("constant term is zero; strip the root 0 first")]
    ZeroConstantTerm,
    #[error("Newton polygon needs degree at least 1")]
    Constant,
}

/// One edge of the lower hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub start: (usize, i64),
    pub end: (usize, i64),
    #[serde(with = "crate::serde_dec")]
    pub slope: Ratio<i64>,
    /// Lattice points on the closed segment, endpoints included.
    pub lattice_points: u64,
}

impl Segment {
    fn new(start: (usize, i64), end: (usize, i64)) -> Self {
        let dx = (end.0 - start.0) as i64;
        let dy = end.1 - start.1;
        Segment {
            start,
            end,
            slope: Ratio::new(dy, dx),
            lattice_points: dx.gcd(&dy) as u64 + 1,
        }
    }
}

/// Lower convex hull of the points `(i, v(a_i))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub points: Vec<(usize, i64)>,
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

/// `(b - a) x (c - a)`; positive when `a, b, c` turn counter-clockwise.
fn cross(a: (usize, i64), b: (usize, i64), c: (usize, i64)) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    (b.0 as i128 - ax) * (c.1 as i128 - ay) - (b.1 as i128 - ay) * (c.0 as i128 - ax)
}

impl NewtonPolygon {
    /// Builds the polygon from `(i, v(a_i))` for the nonzero coefficients,
    /// ordered by `i`.
    pub fn from_points(points: Vec<(usize, i64)>) -> Result<Self, PadicError> {
        match points.first() {
            Some(&(0, _)) => {}
            _ => return Err(PadicError::ZeroConstantTerm),
        }
        if points.len() < 2 {
            return Err(PadicError::Constant);
        }
        let mut hull: Vec<(usize, i64)> = Vec::new();
        for &pt in &points {
            // Collinear middle points are dropped so slopes strictly increase.
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
                hull.pop();
            }
            hull.push(pt);
        }
        let segments = hull.windows(2).map(|w| Segment::new(w[0], w[1])).collect();
        let pg = NewtonPolygon {
            points,
            vertices: hull,
            segments,
        };
        assert!(pg.hull_is_valid(), "Newton polygon construction failed");
        Ok(pg)
    }

    /// Every point lies on or above the hull and the slopes strictly increase.
    pub fn hull_is_valid(&self) -> bool {
        let first = self.points.first() == self.vertices.first();
        let last = self.points.last() == self.vertices.last();
        let increasing = self.segments.windows(2).all(|w| w[0].slope < w[1].slope);
        let above = self.points.iter().all(|&pt| {
            self.segments
                .iter()
                .filter(|s| s.start.0 <= pt.0 && pt.0 <= s.end.0)
                .all(|s| cross(s.start, s.end, pt) >= 0)
        });
        first && last && increasing && above
    }

    pub fn degree(&self) -> usize {
        self.vertices.last().map_or(0, |v| v.0)
    }
}

/// Newton polygon of a coefficient list under a valuation; `v` returns
/// `None` for zero coefficients.
pub fn newton_polygon<T>(
    coeffs: &[T],
    v: impl Fn(&T) -> Option<i64>,
) -> Result<NewtonPolygon, PadicError> {
    let points = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| v(c).map(|val| (i, val)))
        .collect();
    NewtonPolygon::from_points(points)
}

/// 2-adic Newton polygon of a polynomial over `Z[1/2]`.
pub fn newton_polygon_2adic(u: &IntPolynomial) -> Result<NewtonPolygon, PadicError> {
    if u.coeffs().first().is_none_or(|c| c.is_zero()) {
        return Err(PadicError::ZeroConstantTerm);
    }
    let e = u.denom_exp();
    newton_polygon(u.coeffs(), |c| dyadic_valuation(c, e))
}

/// Outcome of the Eisenstein-Dumas test with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinDumas {
    pub irreducible: bool,
    /// `gcd(v(a_0) - v(a_n), n)`, or 0 when the hull has several segments.
    pub gcd: u64,
    /// The segment, when the hull has exactly one.
    pub segment: Option<Segment>,
}

/// Irreducible over the completion when the hull is a single segment whose
/// only lattice points are its endpoints.
pub fn eisenstein_dumas(pg: &NewtonPolygon) -> EisensteinDumas {
    match pg.segments.as_slice() {
        [s] => {
            let n = (s.end.0 - s.start.0) as i64;
            let rise = s.start.1 - s.end.1;
            let g = n.gcd(&rise) as u64;
            debug_assert_eq!(g + 1, s.lattice_points);
            EisensteinDumas {
                irreducible: g == 1,
                gcd: g,
                segment: Some(s.clone()),
            }
        }
        _ => EisensteinDumas {
            irreducible: false,
            gcd: 0,
            segment: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn dyadic(coeffs: &[i64], e: u32) -> IntPolynomial {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), e)
    }

    #[test]
    fn mori_polygons() {
        // x^3 - 2x - 3/4
        let pg = newton_polygon_2adic(&dyadic(&[-3, -8, 0, 4], 2)).unwrap();
        assert_eq!(pg.vertices, vec![(0, -2), (3, 0)]);
        assert_eq!(pg.segments.len(), 1);
        assert_eq!(pg.segments[0].slope, Ratio::new(2, 3));
        assert_eq!(pg.segments[0].lattice_points, 2);
        let ed = eisenstein_dumas(&pg);
        assert!(ed.irreducible);
        assert_eq!(ed.gcd, 1);

        // x^5 - 2x - 5/4
        let pg = newton_polygon_2adic(&dyadic(&[-5, -8, 0, 0, 0, 4], 2)).unwrap();
        assert_eq!(pg.vertices, vec![(0, -2), (5, 0)]);
        assert!(eisenstein_dumas(&pg).irreducible);
    }

    #[test]
    fn eisenstein_at_odd_prime() {
        // x^2 - 7 at 7
        let pg = newton_polygon(&[-7i64, 0, 1], |&c| {
            (c != 0).then(|| {
                let mut v = 0;
                let mut c = c;
                while c % 7 == 0 {
                    c /= 7;
                    v += 1;
                }
                v
            })
        })
        .unwrap();
        assert_eq!(pg.vertices, vec![(0, 1), (2, 0)]);
        assert!(eisenstein_dumas(&pg).irreducible);
    }

    #[test]
    fn interior_lattice_point_fails() {
        let pg = NewtonPolygon::from_points(vec![(0, 2), (4, 0)]).unwrap();
        let ed = eisenstein_dumas(&pg);
        assert!(!ed.irreducible);
        assert_eq!(ed.gcd, 2);
        assert_eq!(pg.segments[0].lattice_points, 3);
        // several segments
        let pg = NewtonPolygon::from_points(vec![(0, 3), (1, 0), (3, 0)]).unwrap();
        assert_eq!(pg.segments.len(), 2);
        assert!(!eisenstein_dumas(&pg).irreducible);
    }

    #[test]
    fn collinear_points_merge() {
        let pg = NewtonPolygon::from_points(vec![(0, 4), (1, 3), (2, 2), (4, 0)]).unwrap();
        assert_eq!(pg.vertices, vec![(0, 4), (4, 0)]);
        assert_eq!(pg.segments[0].lattice_points, 5);
    }

    #[test]
    fn rejects_zero_constant() {
        assert_eq!(
            newton_polygon_2adic(&dyadic(&[0, 1, 1], 0)),
            Err(PadicError::ZeroConstantTerm)
        );
    }

    #[test]
    fn json_form() {
        let pg = NewtonPolygon::from_points(vec![(0, -2), (1, 1), (3, 0)]).unwrap();
        let s = serde_json::to_string(&pg).unwrap();
        assert!(s.contains("\"slope\":\"2/3\""));
        let back: NewtonPolygon = serde_json::from_str(&s).unwrap();
        assert_eq!(back, pg);
    }
}
