//! Moment regions of star-shaped toric domains as rational polygons.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{qi, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(qi(x), qi(y))
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scaled(&self, c: &Q) -> Point {
        Point::new(&self.x * c, &self.y * c)
    }

    pub fn cross(&self, other: &Point) -> Q {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &Point) -> Q {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            crate::rational::fmt_q(&self.x),
            crate::rational::fmt_q(&self.y)
        )
    }
}

/// The linear form `A_{m₁,m₂}(x₁,x₂) = m₁x₁ + m₂x₂` with `(m₁,m₂) ∉ (Z≤0)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearForm {
    pub m1: i64,
    pub m2: i64,
}

impl LinearForm {
    pub fn new(m1: i64, m2: i64) -> Result<Self> {
        if m1 <= 0 && m2 <= 0 {
            return Err(Error::InvalidParameter(format!(
                "form ({m1},{m2}) lies in (Z<=0)^2"
            )));
        }
        Ok(LinearForm { m1, m2 })
    }

    /// Whether `(m₁,m₂)` is a valid index of the chain model.
    pub fn is_valid(m1: i64, m2: i64) -> bool {
        m1 > 0 || m2 > 0
    }

    pub fn line(&self) -> i64 {
        self.m1 + self.m2
    }

    pub fn is_positive(&self) -> bool {
        self.m1 > 0 && self.m2 > 0
    }

    pub fn eval(&self, p: &Point) -> Q {
        &p.x * qi(self.m1) + &p.y * qi(self.m2)
    }

    /// Value of the form on a direction vector.
    pub fn pair(&self, d: &Point) -> Q {
        self.eval(d)
    }

    pub fn gcd(&self) -> i64 {
        self.m1.gcd(&self.m2)
    }

    pub fn shift1(&self) -> LinearForm {
        LinearForm { m1: self.m1 + 1, m2: self.m2 }
    }

    pub fn shift2(&self) -> LinearForm {
        LinearForm { m1: self.m1, m2: self.m2 + 1 }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m1, self.m2)
    }
}

/// Shape flags of a profile. A single-edge profile (ellipsoid) is both
/// concave and weakly convex, so the flags are not exclusive.
///
/// For polygons the flags are decided by turn directions at the interior
/// vertices of the boundary polyline: all right turns means the complement
/// `(R>0)² ∖ Ω` is convex (concave), all left turns means `Ω` is convex.
/// Strong convexity additionally asks that the fourfold reflection of `Ω`
/// stays convex, i.e. both corner slopes `t₁, t₂` are nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainClass {
    pub concave: bool,
    pub weakly_convex: bool,
    pub strongly_convex: bool,
}

impl DomainClass {
    pub fn tag(&self) -> &'static str {
        match (self.concave, self.weakly_convex, self.strongly_convex) {
            (true, true, _) => "concave_and_convex",
            (true, false, _) => "concave",
            (false, true, true) => "strongly_convex_and_weakly_convex",
            (false, true, false) => "weakly_convex",
            (false, false, _) => "neither",
        }
    }
}

/// A rational star-shaped polygonal moment region.
///
/// Stored as the boundary polyline `∂Ω` from `(ρ(0), 0)` on the x₁-axis to
/// `(0, ρ(π/2))` on the x₂-axis; the region is the union of the triangles
/// spanned by the origin and each edge. Collinear interior vertices are
/// merged on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToricProfile {
    vertices: Vec<Point>,
}

impl ToricProfile {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidProfile(msg));
        if vertices.len() < 2 {
            return bad("need at least two vertices".into());
        }
        let first = &vertices[0];
        let last = &vertices[vertices.len() - 1];
        if !first.y.is_zero() || !first.x.is_positive() {
            return bad(format!("first vertex {first} must lie on the positive x1-axis"));
        }
        if !last.x.is_zero() || !last.y.is_positive() {
            return bad(format!("last vertex {last} must lie on the positive x2-axis"));
        }
        for v in &vertices[1..vertices.len() - 1] {
            if !v.x.is_positive() || !v.y.is_positive() {
                return bad(format!("intermediate vertex {v} must have x1 > 0 and x2 > 0"));
            }
        }
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return bad(format!("repeated vertex {}", w[0]));
            }
            if !w[0].cross(&w[1]).is_positive() {
                return bad(format!(
                    "polar angle must increase strictly from {} to {}",
                    w[0], w[1]
                ));
            }
        }
        let mut merged: Vec<Point> = Vec::with_capacity(vertices.len());
        for v in vertices {
            while merged.len() >= 2 {
                let n = merged.len();
                let d0 = merged[n - 1].sub(&merged[n - 2]);
                let d1 = v.sub(&merged[n - 1]);
                if d0.cross(&d1).is_zero() {
                    merged.pop();
                } else {
                    break;
                }
            }
            merged.push(v);
        }
        Ok(ToricProfile { vertices: merged })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        ToricProfile::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    /// Moment triangle `{x₁/a + x₂/b ≤ 1}`.
    pub fn ellipsoid(a: Q, b: Q) -> Result<Self> {
        if !a.is_positive() || !b.is_positive() {
            return Err(Error::InvalidParameter("ellipsoid parameters must be positive".into()));
        }
        ToricProfile::new(vec![Point::new(a, Q::zero()), Point::new(Q::zero(), b)])
    }

    /// Moment rectangle `[0,a] × [0,b]`.
    pub fn polydisk(a: Q, b: Q) -> Result<Self> {
        if !a.is_positive() || !b.is_positive() {
            return Err(Error::InvalidParameter("polydisk parameters must be positive".into()));
        }
        ToricProfile::new(vec![
            Point::new(a.clone(), Q::zero()),
            Point::new(a, b.clone()),
            Point::new(Q::zero(), b),
        ])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    /// `ρ(0)`: where `∂Ω` meets the x₁-axis.
    pub fn rho_x(&self) -> &Q {
        &self.vertices[0].x
    }

    /// `ρ(π/2)`: where `∂Ω` meets the x₂-axis.
    pub fn rho_y(&self) -> &Q {
        &self.vertices[self.vertices.len() - 1].y
    }

    pub fn corner_x(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn corner_y(&self) -> &Point {
        &self.vertices[self.vertices.len() - 1]
    }

    /// Direction of edge `i` (from vertex `i` to vertex `i+1`).
    pub fn edge_direction(&self, i: usize) -> Point {
        self.vertices[i + 1].sub(&self.vertices[i])
    }

    pub fn scale(&self, c: &Q) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidParameter("scale factor must be positive".into()));
        }
        Ok(ToricProfile { vertices: self.vertices.iter().map(|v| v.scaled(c)).collect() })
    }

    pub fn classify(&self) -> DomainClass {
        let n = self.vertices.len();
        let mut all_left = true;
        let mut all_right = true;
        for i in 1..n - 1 {
            let turn = self.edge_direction(i - 1).cross(&self.edge_direction(i));
            if turn.is_positive() {
                all_right = false;
            } else {
                all_left = false;
            }
        }
        // t₁ ≥ 0 ⟺ the first edge does not lean outward; likewise t₂ at the x₂-axis.
        let first = self.edge_direction(0);
        let last = self.edge_direction(n - 2);
        let strong = all_left && !first.x.is_positive() && !last.y.is_positive();
        DomainClass { concave: all_right, weakly_convex: all_left, strongly_convex: strong }
    }

    /// Index of the edge whose angular sector (as seen from the origin)
    /// contains the direction of `p`. `p` must be nonzero in the quadrant.
    fn sector_of(&self, p: &Point) -> usize {
        for i in 0..self.edge_count() {
            let u = &self.vertices[i];
            let w = &self.vertices[i + 1];
            if !u.cross(p).is_negative() && !p.cross(w).is_negative() {
                return i;
            }
        }
        unreachable!("every quadrant direction lies in some sector")
    }

    /// Signed position of `p` relative to the boundary along its ray:
    /// positive strictly inside, zero on `∂Ω`, negative outside.
    fn radial_side(&self, p: &Point) -> Q {
        let i = self.sector_of(p);
        let u = &self.vertices[i];
        let w = &self.vertices[i + 1];
        w.sub(u).cross(&p.sub(u))
    }

    pub fn contains(&self, p: &Point) -> bool {
        if p.x.is_negative() || p.y.is_negative() {
            return false;
        }
        if p.is_origin() {
            return true;
        }
        !self.radial_side(p).is_negative()
    }

    fn contains_strictly(&self, p: &Point) -> bool {
        if p.x.is_negative() || p.y.is_negative() {
            return false;
        }
        if p.is_origin() {
            return true;
        }
        self.radial_side(p).is_positive()
    }

    /// `self ⊂ outer`. Two star-shaped polygons are nested iff every vertex of
    /// the inner one lies in the outer one and no vertex of the outer one lies
    /// strictly inside the inner one; between consecutive breakpoint angles
    /// both boundaries are straight segments.
    pub fn is_included_in(&self, outer: &ToricProfile) -> bool {
        self.vertices.iter().all(|v| outer.contains(v))
            && !outer.vertices.iter().any(|v| self.contains_strictly(v))
    }

    /// Largest `min{x₁,x₂}` over the polygon. The maximum is attained on
    /// `∂Ω`, on each edge at an endpoint or where the edge crosses the
    /// diagonal.
    pub fn max_min_coordinate(&self) -> Q {
        let min2 = |p: &Point| if p.x < p.y { p.x.clone() } else { p.y.clone() };
        let mut best = Q::zero();
        for v in &self.vertices {
            best = best.max(min2(v));
        }
        for i in 0..self.edge_count() {
            let u = &self.vertices[i];
            let w = &self.vertices[i + 1];
            let du = &u.x - &u.y;
            let dw = &w.x - &w.y;
            if (du.is_positive() && dw.is_negative()) || (du.is_negative() && dw.is_positive()) {
                let s = &du / (&du - &dw);
                let p = u.add(&w.sub(u).scaled(&s));
                best = best.max(min2(&p));
            }
        }
        best
    }

    pub fn max_coordinate(&self) -> Q {
        self.vertices
            .iter()
            .flat_map(|v| [v.x.clone(), v.y.clone()])
            .max()
            .unwrap_or_else(Q::zero)
    }
}

/// `includes(Ω′, Ω)`: whether `inner ⊂ outer`.
pub fn includes(inner: &ToricProfile, outer: &ToricProfile) -> bool {
    inner.is_included_in(outer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn pts(p: &ToricProfile) -> Vec<(Q, Q)> {
        p.vertices().iter().map(|v| (v.x.clone(), v.y.clone())).collect()
    }

    fn lshape() -> ToricProfile {
        ToricProfile::from_ints(&[(2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn presets() {
        let e = ToricProfile::ellipsoid(qi(1), qi(2)).unwrap();
        assert_eq!(pts(&e), vec![(qi(1), qi(0)), (qi(0), qi(2))]);
        let p = ToricProfile::polydisk(qi(2), qi(1)).unwrap();
        assert_eq!(pts(&p), vec![(qi(2), qi(0)), (qi(2), qi(1)), (qi(0), qi(1))]);
        assert!(ToricProfile::ellipsoid(qi(0), qi(1)).is_err());
        assert!(ToricProfile::polydisk(qi(1), qi(-1)).is_err());
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(ToricProfile::from_ints(&[(1, 0)]).is_err());
        assert!(ToricProfile::from_ints(&[(1, 1), (0, 1)]).is_err());
        assert!(ToricProfile::from_ints(&[(1, 0), (1, 1)]).is_err());
        // angle decreases
        assert!(ToricProfile::from_ints(&[(2, 0), (1, 2), (2, 1), (0, 2)]).is_err());
        assert!(ToricProfile::from_ints(&[(2, 0), (1, 1), (1, 1), (0, 2)]).is_err());
    }

    #[test]
    fn merges_collinear_vertices() {
        let p = ToricProfile::new(vec![
            Point::from_ints(2, 0),
            Point::new(qi(1), q(1, 2)),
            Point::from_ints(0, 1),
        ])
        .unwrap();
        assert_eq!(p.vertices().len(), 2);
    }

    #[test]
    fn scaling() {
        let e = ToricProfile::ellipsoid(qi(1), qi(1)).unwrap();
        assert_eq!(pts(&e.scale(&qi(2)).unwrap()), vec![(qi(2), qi(0)), (qi(0), qi(2))]);
        assert_eq!(e.scale(&qi(1)).unwrap(), e);
        let r = ToricProfile::polydisk(qi(1), qi(1)).unwrap();
        assert_eq!(
            pts(&r.scale(&q(1, 2)).unwrap()),
            vec![(q(1, 2), qi(0)), (q(1, 2), q(1, 2)), (qi(0), q(1, 2))]
        );
        assert!(e.scale(&qi(0)).is_err());
    }

    #[test]
    fn classification() {
        let e = ToricProfile::ellipsoid(qi(1), qi(1)).unwrap().classify();
        assert!(e.concave && e.weakly_convex);
        let r = ToricProfile::polydisk(qi(1), qi(1)).unwrap().classify();
        assert!(!r.concave && r.weakly_convex && r.strongly_convex);
        let l = lshape().classify();
        assert!(!l.concave && !l.weakly_convex && !l.strongly_convex);
        assert_eq!(l.tag(), "neither");
        // convex but leaning outward at the x₁-axis
        let lean = ToricProfile::from_ints(&[(1, 0), (2, 1), (0, 2)]).unwrap().classify();
        assert!(lean.weakly_convex && !lean.strongly_convex);
        let concave = ToricProfile::from_ints(&[(4, 0), (1, 1), (0, 4)]).unwrap().classify();
        assert!(concave.concave && !concave.weakly_convex);
    }

    #[test]
    fn containment() {
        let e = ToricProfile::ellipsoid(qi(1), qi(1)).unwrap();
        assert!(e.contains(&Point::new(q(1, 4), q(1, 4))));
        assert!(!e.contains(&Point::from_ints(1, 1)));
        assert!(e.contains(&Point::new(q(1, 2), q(1, 2))));
        assert!(!e.contains(&Point::new(q(-1, 4), q(1, 4))));
        let l = lshape();
        assert!(l.contains(&Point::new(q(3, 2), q(1, 2))));
        assert!(!l.contains(&Point::new(q(3, 2), q(3, 2))));
        let half = l.scale(&q(1, 2)).unwrap();
        assert!(includes(&half, &l));
        assert!(!includes(&l, &half));
        assert!(includes(&l, &l));
        // vertex containment alone is not enough: the hexagon cuts the L's notch
        let cut = ToricProfile::from_ints(&[(2, 0), (2, 1), (1, 2), (0, 2)]).unwrap();
        assert!(cut.vertices().iter().all(|v| l.contains(v)));
        assert!(!includes(&cut, &l));
        assert!(includes(&l, &cut));
        let tri = ToricProfile::ellipsoid(qi(2), qi(2)).unwrap();
        assert!(includes(&tri, &l));
    }

    #[test]
    fn max_min() {
        assert_eq!(ToricProfile::ellipsoid(qi(1), qi(1)).unwrap().max_min_coordinate(), q(1, 2));
        assert_eq!(ToricProfile::polydisk(qi(2), qi(1)).unwrap().max_min_coordinate(), qi(1));
        assert_eq!(lshape().max_min_coordinate(), qi(1));
        // a spike below the diagonal reaches further than the diagonal itself
        let spike = ToricProfile::from_ints(&[(1, 0), (10, 8), (1, 1), (0, 1)]);
        let spike = spike.unwrap();
        assert_eq!(spike.max_min_coordinate(), qi(8));
    }
}
