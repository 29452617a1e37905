//! Triangular membership functions and complementary seven-curve partitions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number of curves in every partition.
pub const CURVES: usize = 7;

/// Linguistic labels, ordered from most negative to most positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FuzzyLabel {
    NL,
    NM,
    NS,
    ZE,
    PS,
    PM,
    PL,
}

impl FuzzyLabel {
    pub const ALL: [FuzzyLabel; CURVES] = [
        FuzzyLabel::NL,
        FuzzyLabel::NM,
        FuzzyLabel::NS,
        FuzzyLabel::ZE,
        FuzzyLabel::PS,
        FuzzyLabel::PM,
        FuzzyLabel::PL,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<FuzzyLabel> {
        Self::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FuzzyLabel::NL => "NL",
            FuzzyLabel::NM => "NM",
            FuzzyLabel::NS => "NS",
            FuzzyLabel::ZE => "ZE",
            FuzzyLabel::PS => "PS",
            FuzzyLabel::PM => "PM",
            FuzzyLabel::PL => "PL",
        }
    }

    pub fn meaning(self) -> &'static str {
        match self {
            FuzzyLabel::NL => "Negative Large",
            FuzzyLabel::NM => "Negative Medium",
            FuzzyLabel::NS => "Negative Small",
            FuzzyLabel::ZE => "Zero",
            FuzzyLabel::PS => "Positive Small",
            FuzzyLabel::PM => "Positive Medium",
            FuzzyLabel::PL => "Positive Large",
        }
    }
}

impl fmt::Display for FuzzyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FuzzyLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown fuzzy label {s:?}")))
    }
}

/// A triangle `(left, vertex, right)`.
///
/// Slopes are precomputed so evaluation needs one subtraction and one
/// multiplication. A side of zero width is a step: the value is 1 exactly at
/// the vertex and 0 strictly beyond it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangularMf<T> {
    left: T,
    vertex: T,
    right: T,
    rise: T,
    fall: T,
}

impl<T: Real> TriangularMf<T> {
    pub fn new(left: T, vertex: T, right: T) -> Result<Self> {
        if !(left <= vertex && vertex <= right) {
            return Err(Error::InvalidTriangle {
                left: left.as_f64(),
                vertex: vertex.as_f64(),
                right: right.as_f64(),
            });
        }
        let inverse = |width: T| if width > T::zero() { T::one() / width } else { T::zero() };
        Ok(TriangularMf {
            left,
            vertex,
            right,
            rise: inverse(vertex - left),
            fall: inverse(right - vertex),
        })
    }

    pub fn left(&self) -> T {
        self.left
    }

    pub fn vertex(&self) -> T {
        self.vertex
    }

    pub fn right(&self) -> T {
        self.right
    }

    /// Membership degree of `x`, always in `[0, 1]`.
    #[inline]
    pub fn eval(&self, x: T) -> T {
        if x == self.vertex {
            return T::one();
        }
        if x <= self.left || x >= self.right {
            return T::zero();
        }
        let degree = if x < self.vertex {
            (x - self.left) * self.rise
        } else {
            (self.right - x) * self.fall
        };
        if degree > T::one() {
            T::one()
        } else {
            degree
        }
    }
}

/// The adjacent pair of curves active at a point, with their complementary degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivePair<T> {
    pub lower: usize,
    pub upper: usize,
    pub lower_degree: T,
    pub upper_degree: T,
}

/// Seven complementary triangles over a closed domain.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyPartition<T> {
    domain_min: T,
    domain_max: T,
    curves: [TriangularMf<T>; CURVES],
}

fn check_domain<T: Real>(min: T, max: T) -> Result<()> {
    if min < max && min.is_finite() && max.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDomain { min: min.as_f64(), max: max.as_f64() })
    }
}

/// Seven points equally spaced from `min` to `max`, both ends exact.
///
/// Each point is a convex combination of the ends, so the spacing over a
/// symmetric domain is exactly mirror-symmetric.
pub(crate) fn equal_spacing<T: Real>(min: T, max: T) -> [T; CURVES] {
    let steps = T::from_usize(CURVES - 1);
    std::array::from_fn(|k| {
        if k == 0 {
            min
        } else if k == CURVES - 1 {
            max
        } else {
            (min * T::from_usize(CURVES - 1 - k) + max * T::from_usize(k)) / steps
        }
    })
}

impl<T: Real> FuzzyPartition<T> {
    /// Equally spaced vertices over `[domain_min, domain_max]`.
    pub fn uniform(domain_min: T, domain_max: T) -> Result<Self> {
        check_domain(domain_min, domain_max)?;
        Self::rebuild(equal_spacing(domain_min, domain_max), domain_min, domain_max)
    }

    /// Redraws the curves from a vertex list: interior curves span their
    /// neighbours' vertices, the two end curves are clamped to the domain.
    pub fn rebuild(vertices: [T; CURVES], domain_min: T, domain_max: T) -> Result<Self> {
        check_domain(domain_min, domain_max)?;
        for (index, &v) in vertices.iter().enumerate() {
            if !(v >= domain_min && v <= domain_max) {
                return Err(Error::VertexOutOfDomain {
                    index,
                    value: v.as_f64(),
                    min: domain_min.as_f64(),
                    max: domain_max.as_f64(),
                });
            }
            if index > 0 && v < vertices[index - 1] {
                return Err(Error::UnsortedVertices {
                    index,
                    value: v.as_f64(),
                    previous: vertices[index - 1].as_f64(),
                });
            }
        }

        let mut curves = Vec::with_capacity(CURVES);
        for k in 0..CURVES {
            let left = if k == 0 { domain_min } else { vertices[k - 1] };
            let right = if k == CURVES - 1 { domain_max } else { vertices[k + 1] };
            curves.push(TriangularMf::new(left, vertices[k], right)?);
        }
        let curves = curves.try_into().unwrap_or_else(|_| unreachable!());
        Ok(FuzzyPartition { domain_min, domain_max, curves })
    }

    pub fn domain(&self) -> (T, T) {
        (self.domain_min, self.domain_max)
    }

    pub fn curves(&self) -> &[TriangularMf<T>; CURVES] {
        &self.curves
    }

    pub fn curve(&self, label: FuzzyLabel) -> &TriangularMf<T> {
        &self.curves[label.index()]
    }

    pub fn vertices(&self) -> [T; CURVES] {
        std::array::from_fn(|k| self.curves[k].vertex)
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.domain_min && x <= self.domain_max
    }

    /// Finds the two adjacent curves whose degrees sum to one at `x`.
    ///
    /// At an interior vertex the right-hand pair is returned with degrees
    /// `(1, 0)`. Between the domain ends and the outermost vertices the end
    /// curve is held at 1.
    pub fn active_pair(&self, x: T) -> Result<ActivePair<T>> {
        if !self.contains(x) {
            return Err(Error::OutOfDomain {
                value: x.as_f64(),
                min: self.domain_min.as_f64(),
                max: self.domain_max.as_f64(),
            });
        }
        let first = self.curves[0].vertex;
        let last = self.curves[CURVES - 1].vertex;
        let held = |lower: usize, on_lower: bool| ActivePair {
            lower,
            upper: lower + 1,
            lower_degree: if on_lower { T::one() } else { T::zero() },
            upper_degree: if on_lower { T::zero() } else { T::one() },
        };
        if x < first || first == last {
            return Ok(held(0, true));
        }
        if x > last {
            return Ok(held(CURVES - 2, false));
        }

        // Rightmost segment of positive width starting at or before x.
        let m = (0..CURVES - 1)
            .rev()
            .find(|&k| self.curves[k].vertex <= x && self.curves[k].vertex < self.curves[k + 1].vertex)
            .expect("x within [first, last] lies on some segment of positive width");
        Ok(ActivePair {
            lower: m,
            upper: m + 1,
            lower_degree: self.curves[m].eval(x),
            upper_degree: self.curves[m + 1].eval(x),
        })
    }

    /// All seven degrees at `x`; zero outside the active pair.
    pub fn degrees(&self, x: T) -> Result<[T; CURVES]> {
        let pair = self.active_pair(x)?;
        let mut out = [T::zero(); CURVES];
        out[pair.lower] = pair.lower_degree;
        out[pair.upper] = pair.upper_degree;
        Ok(out)
    }

    /// Converts every boundary coordinate to another scalar type.
    pub fn map_scalar<U: Real>(&self, f: impl Fn(T) -> U) -> FuzzyPartition<U> {
        let curves = self.curves.map(|c| TriangularMf {
            left: f(c.left),
            vertex: f(c.vertex),
            right: f(c.right),
            rise: f(c.rise),
            fall: f(c.fall),
        });
        FuzzyPartition { domain_min: f(self.domain_min), domain_max: f(self.domain_max), curves }
    }
}
