//! The extended boundary curve `∂₊Ω`, critical points of linear forms along
//! it, and the action spectrum.
//!
//! On a polygon the Morse theory of `A_{m₁,m₂}|∂Ω` is combinatorial: a
//! critical point is a vertex that is a strict local extremum of the form
//! along the polyline, with Morse index 0 at a minimum and 1 at a maximum.
//! A form that is constant on an edge turns that edge into a degenerate
//! critical set (a plateau); such plateaus are tracked separately.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::domain::{LinearForm, Point, ToricProfile};
use crate::error::{Error, Result};
use crate::rational::{ceil_q, floor_q, qi, Q};

/// `∂₊Ω` with a piecewise-affine parameter: the x₁-axis ray is `(−∞, 0]`,
/// edge `i` of `∂Ω` is `[i, i+1]` and the x₂-axis ray is `[n, ∞)` where `n`
/// is the number of edges.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryCurve<'a> {
    profile: &'a ToricProfile,
}

impl<'a> BoundaryCurve<'a> {
    pub fn new(profile: &'a ToricProfile) -> Self {
        BoundaryCurve { profile }
    }

    pub fn profile(&self) -> &'a ToricProfile {
        self.profile
    }

    /// Number of edges of `∂Ω`; the x₂-axis corner sits at this parameter.
    pub fn len(&self) -> usize {
        self.profile.edge_count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point_at(&self, u: &Q) -> Point {
        let verts = self.profile.vertices();
        let n = self.len();
        if !u.is_positive() {
            return Point::new(self.profile.rho_x() - u, Q::zero());
        }
        let nq = qi(n as i64);
        if *u >= nq {
            return Point::new(Q::zero(), self.profile.rho_y() + (u - nq));
        }
        let i = floor_q(u).to_usize().expect("parameter within the edge range");
        let t = u - qi(i as i64);
        verts[i].add(&verts[i + 1].sub(&verts[i]).scaled(&t))
    }

    /// Values of `form` at the vertex parameters `0..=n`.
    pub fn vertex_values(&self, form: &LinearForm) -> Vec<Q> {
        self.profile.vertices().iter().map(|v| form.eval(v)).collect()
    }

    /// Value of `form` at parameter `u`, using the affine structure.
    pub fn value_at(&self, form: &LinearForm, values: &[Q], u: &Q) -> Q {
        let n = self.len();
        if !u.is_positive() {
            return &values[0] - u * qi(form.m1);
        }
        let nq = qi(n as i64);
        if *u >= nq {
            return &values[n] + (u - nq) * qi(form.m2);
        }
        let i = floor_q(u).to_usize().expect("parameter within the edge range");
        let t = u - qi(i as i64);
        &values[i] + (&values[i + 1] - &values[i]) * t
    }

    /// Incoming and outgoing directions at vertex `i` of `∂₊Ω`; the corners
    /// use the axis rays.
    pub fn vertex_directions(&self, i: usize) -> (Point, Point) {
        let n = self.len();
        let incoming =
            if i == 0 { Point::from_ints(-1, 0) } else { self.profile.edge_direction(i - 1) };
        let outgoing = if i == n { Point::from_ints(0, 1) } else { self.profile.edge_direction(i) };
        (incoming, outgoing)
    }
}

/// A maximal run `first..=last` of consecutive `∂₊Ω` vertices with equal
/// value of the form that is a local extremum along the curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremum {
    pub first: usize,
    pub last: usize,
    pub value: Q,
    pub is_min: bool,
}

fn sign(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// All local extrema of `form` along `∂₊Ω`, plateaus included. The rays
/// contribute only their direction of growth (`sign m₁` towards the x₁ end,
/// `sign m₂` towards the x₂ end).
pub fn extrema(profile: &ToricProfile, form: &LinearForm) -> Vec<Extremum> {
    let curve = BoundaryCurve::new(profile);
    let values = curve.vertex_values(form);
    let n = values.len() - 1;
    let mut out = Vec::new();
    let mut i = 0;
    while i <= n {
        let mut j = i;
        while j < n && values[j + 1] == values[i] {
            j += 1;
        }
        let left = if i == 0 { form.m1.signum() as i8 } else { sign(&(&values[i - 1] - &values[i])) };
        let right = if j == n { form.m2.signum() as i8 } else { sign(&(&values[j + 1] - &values[j])) };
        if left == 1 && right == 1 {
            out.push(Extremum { first: i, last: j, value: values[i].clone(), is_min: true });
        } else if left == -1 && right == -1 {
            out.push(Extremum { first: i, last: j, value: values[i].clone(), is_min: false });
        }
        i = j + 1;
    }
    out
}

/// Positive critical values of `form` along `∂₊Ω` (plateaus and corners
/// included), sorted and deduplicated.
pub fn critical_values(profile: &ToricProfile, form: &LinearForm) -> Vec<Q> {
    let mut vals: Vec<Q> = extrema(profile, form)
        .into_iter()
        .filter(|e| e.value.is_positive())
        .map(|e| e.value)
        .collect();
    vals.sort();
    vals.dedup();
    vals
}

/// `(t₁, t₂)`: the first edge is spanned by `(−t₁, 1)`, the last by `(1, −t₂)`.
pub fn corner_slopes(profile: &ToricProfile) -> Result<(Q, Q)> {
    let first = profile.edge_direction(0);
    let last = profile.edge_direction(profile.edge_count() - 1);
    if first.y.is_zero() || last.x.is_zero() {
        return Err(Error::InvalidProfile("corner edge tangent to an axis".into()));
    }
    Ok((-&first.x / &first.y, -&last.y / &last.x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    CornerX,
    CornerY,
    Interior,
    /// A plateau: the form is constant on an edge that is a local extremum.
    Edge,
}

impl CriticalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CriticalKind::CornerX => "corner_x",
            CriticalKind::CornerY => "corner_y",
            CriticalKind::Interior => "interior",
            CriticalKind::Edge => "edge",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalPoint {
    #[serde(serialize_with = "crate::io::ser_point")]
    pub location: Point,
    pub kind: CriticalKind,
    /// Vertex index on `∂₊Ω` (for edges: the first endpoint).
    pub vertex: usize,
    /// 0 at a local minimum, 1 at a local maximum; `None` at corners.
    pub morse_index: Option<u8>,
    /// The (non-primitive) form for interior and edge points.
    pub form: Option<LinearForm>,
}

/// Positive critical points of `form` at interior vertices of `∂Ω`.
pub fn critical_points(profile: &ToricProfile, form: &LinearForm) -> Result<Vec<CriticalPoint>> {
    for e in 0..profile.edge_count() {
        if form.pair(&profile.edge_direction(e)).is_zero() {
            return Err(Error::DegenerateEdge { form: *form, edge: e });
        }
    }
    let n = profile.edge_count();
    Ok(extrema(profile, form)
        .into_iter()
        .filter(|e| e.first == e.last && e.first > 0 && e.first < n && e.value.is_positive())
        .map(|e| CriticalPoint {
            location: profile.vertices()[e.first].clone(),
            kind: CriticalKind::Interior,
            vertex: e.first,
            morse_index: Some(if e.is_min { 0 } else { 1 }),
            form: Some(*form),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub point: CriticalPoint,
    pub m: i64,
    #[serde(serialize_with = "crate::io::ser_q")]
    pub action: Q,
    pub index: i64,
}

impl SpectrumEntry {
    fn order_key(&self) -> (&Q, CriticalKind, i64, i64, usize, i64) {
        let (m1, m2) = self.point.form.map(|f| (f.m1, f.m2)).unwrap_or((0, 0));
        (&self.action, self.point.kind, m1, m2, self.point.vertex, self.m)
    }
}

impl PartialOrd for SpectrumEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SpectrumEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

fn perp(d: &Point) -> Point {
    Point::new(-&d.y, d.x.clone())
}

/// The closed cone of forms for which vertex `i` of `∂₊Ω` is a local
/// extremum with nonnegative value. For each vertex exactly one of the
/// minimum cone `{f·d⁻ ≤ 0 ≤ f·d⁺}` and its negative (the maximum cone)
/// carries nonnegative values of `f·v`, because star-shapedness keeps the
/// form orthogonal to `v` out of both.
#[derive(Debug, Clone)]
pub(crate) struct VertexCone {
    pub is_min: bool,
    pub incoming: Point,
    pub outgoing: Point,
    pub generators: [Point; 2],
}

pub(crate) fn vertex_cone(profile: &ToricProfile, i: usize) -> VertexCone {
    let curve = BoundaryCurve::new(profile);
    let (din, dout) = curve.vertex_directions(i);
    let v = &profile.vertices()[i];
    let mut g1 = perp(&din);
    if g1.dot(&dout).is_negative() {
        g1 = g1.scaled(&qi(-1));
    }
    let mut g2 = perp(&dout);
    if g2.dot(&din).is_positive() {
        g2 = g2.scaled(&qi(-1));
    }
    let total = g1.dot(v) + g2.dot(v);
    let is_min = total.is_positive();
    if !is_min {
        g1 = g1.scaled(&qi(-1));
        g2 = g2.scaled(&qi(-1));
    }
    VertexCone { is_min, incoming: din, outgoing: dout, generators: [g1, g2] }
}

impl VertexCone {
    pub fn contains_open(&self, f: &Point) -> bool {
        let a = f.dot(&self.incoming);
        let b = f.dot(&self.outgoing);
        if self.is_min {
            a.is_negative() && b.is_positive()
        } else {
            a.is_positive() && b.is_negative()
        }
    }
}

/// Solves `c·s + e ≥ 0` (or `> 0` when `strict`) for rational `s`, updating
/// the running interval `[lo, hi]`. Returns `false` if infeasible.
fn restrict(lo: &mut Option<Q>, hi: &mut Option<Q>, c: Q, e: Q) -> bool {
    if c.is_zero() {
        return !e.is_negative();
    }
    let root = -e / &c;
    if c.is_positive() {
        if lo.as_ref().is_none_or(|l| root > *l) {
            *lo = Some(root);
        }
    } else if hi.as_ref().is_none_or(|h| root < *h) {
        *hi = Some(root);
    }
    true
}

/// Which cones to scan when enumerating forms on a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ConeScan {
    Minima,
    Extrema,
}

/// Integers `m₁` such that `(m₁, line − m₁)` is a valid form lying in the
/// closed extremum cone of some `∂₊Ω` vertex `v` with `0 ≤ f·v ≤ bound`.
/// Every form with a positive critical value below `bound` is in the
/// result; the set is finite because each cone is pointed with `f·v > 0`
/// away from the origin (corners bound `m₁`, resp. `m₂`, directly).
pub(crate) fn forms_on_line(
    profile: &ToricProfile,
    line: i64,
    bound: &Q,
    scan: ConeScan,
) -> Result<Vec<i64>> {
    let mut found = std::collections::BTreeSet::new();
    let l = qi(line);
    for i in 0..profile.vertices().len() {
        let cone = vertex_cone(profile, i);
        if scan == ConeScan::Minima && !cone.is_min {
            continue;
        }
        let v = &profile.vertices()[i];
        let mut lo = None;
        let mut hi = None;
        // f(s) = (s, l − s); f·d = s(d.x − d.y) + l·d.y
        let lin = |d: &Point| (&d.x - &d.y, &l * &d.y);
        let (ci, ei) = lin(&cone.incoming);
        let (co, eo) = lin(&cone.outgoing);
        let (cv, ev) = lin(v);
        let ok = if cone.is_min {
            restrict(&mut lo, &mut hi, -ci, -ei) && restrict(&mut lo, &mut hi, co, eo)
        } else {
            restrict(&mut lo, &mut hi, ci, ei) && restrict(&mut lo, &mut hi, -co, -eo)
        };
        if !ok {
            continue;
        }
        if !restrict(&mut lo, &mut hi, cv.clone(), ev.clone())
            || !restrict(&mut lo, &mut hi, -cv, bound - ev)
        {
            continue;
        }
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::Truncation(format!(
                "unbounded cone scan at vertex {i} on line {line}"
            )));
        };
        if lo > hi {
            continue;
        }
        let start = ceil_q(&lo);
        let end = floor_q(&hi);
        let (Some(start), Some(end)) = (start.to_i64(), end.to_i64()) else {
            return Err(Error::Truncation("form range exceeds i64".into()));
        };
        for s in start..=end {
            if LinearForm::is_valid(s, line - s) {
                found.insert(s);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Primitive integer normal of a rational direction.
fn primitive_normal(d: &Point) -> (i64, i64) {
    let den = d.x.denom().lcm(d.y.denom());
    let nx: BigInt = -(&d.y * Q::from_integer(den.clone())).to_integer();
    let ny: BigInt = (&d.x * Q::from_integer(den)).to_integer();
    let g = nx.gcd(&ny);
    let nx = (nx / &g).to_i64().expect("edge normal fits in i64");
    let ny = (ny / &g).to_i64().expect("edge normal fits in i64");
    (nx, ny)
}

fn corner_index(m: i64, t: &Q) -> i64 {
    let fl = floor_q(&(t * qi(m))).to_i64().expect("corner index fits in i64");
    1 + 2 * (m + fl)
}

/// All spectrum entries with action `≤ a_max`, sorted by action.
///
/// Corner entries `(ρ(0),0)` and `(0,ρ(π/2))` come with every multiplicity;
/// interior entries are enumerated per vertex over the lattice points of its
/// open extremum cone; plateau entries are emitted for edges on which a
/// multiple of the edge normal is constant and extremal (their values are
/// critical values of the sublevel filtration just like vertex values).
pub fn spectrum(profile: &ToricProfile, a_max: &Q) -> Result<Vec<SpectrumEntry>> {
    if !a_max.is_positive() {
        return Err(Error::InvalidParameter("a_max must be positive".into()));
    }
    let (t1, t2) = corner_slopes(profile)?;
    let n = profile.edge_count();
    let verts = profile.vertices();
    let mut out = Vec::new();

    for (kind, rho, t, vertex) in [
        (CriticalKind::CornerX, profile.rho_x(), &t1, 0),
        (CriticalKind::CornerY, profile.rho_y(), &t2, n),
    ] {
        let mut m = 1i64;
        loop {
            let action = rho * qi(m);
            if action > *a_max {
                break;
            }
            out.push(SpectrumEntry {
                point: CriticalPoint {
                    location: verts[vertex].clone(),
                    kind,
                    vertex,
                    morse_index: None,
                    form: None,
                },
                m,
                index: corner_index(m, t),
                action,
            });
            m += 1;
        }
    }

    for i in 1..n {
        let cone = vertex_cone(profile, i);
        let v = &verts[i];
        let corners: Vec<Point> = cone
            .generators
            .iter()
            .map(|g| g.scaled(&(a_max / g.dot(v))))
            .collect();
        let xs = [Q::zero(), corners[0].x.clone(), corners[1].x.clone()];
        let ys = [Q::zero(), corners[0].y.clone(), corners[1].y.clone()];
        let xmin = floor_q(xs.iter().min().unwrap()).to_i64().unwrap_or(i64::MIN / 4);
        let xmax = ceil_q(xs.iter().max().unwrap()).to_i64().unwrap_or(i64::MAX / 4);
        let ymin = floor_q(ys.iter().min().unwrap()).to_i64().unwrap_or(i64::MIN / 4);
        let ymax = ceil_q(ys.iter().max().unwrap()).to_i64().unwrap_or(i64::MAX / 4);
        for m1 in xmin..=xmax {
            for m2 in ymin..=ymax {
                let f = Point::from_ints(m1, m2);
                if !cone.contains_open(&f) {
                    continue;
                }
                let action = f.dot(v);
                if !action.is_positive() || action > *a_max {
                    continue;
                }
                let form = LinearForm { m1, m2 };
                let mu = if cone.is_min { 0 } else { 1 };
                out.push(SpectrumEntry {
                    point: CriticalPoint {
                        location: v.clone(),
                        kind: CriticalKind::Interior,
                        vertex: i,
                        morse_index: Some(mu),
                        form: Some(form),
                    },
                    m: form.gcd(),
                    index: 2 * (m1 + m2) + mu as i64 - 1,
                    action,
                });
            }
        }
    }

    for e in 1..n.saturating_sub(1) {
        if let Some((nu, value, is_min)) = plateau(profile, e) {
            let mut m = 1i64;
            loop {
                let action = &value * qi(m);
                if action > *a_max {
                    break;
                }
                let form = LinearForm { m1: m * nu.0, m2: m * nu.1 };
                let mu = if is_min { 0 } else { 1 };
                out.push(SpectrumEntry {
                    point: CriticalPoint {
                        location: verts[e].clone(),
                        kind: CriticalKind::Edge,
                        vertex: e,
                        morse_index: Some(mu),
                        form: Some(form),
                    },
                    m,
                    index: 2 * (form.m1 + form.m2) + mu as i64 - 1,
                    action,
                });
                m += 1;
            }
        }
    }

    out.sort();
    Ok(out)
}

/// For edge `e`, the primitive normal form that is constant and positive on
/// it, if that plateau is a local extremum: `(normal, value, is_min)`.
fn plateau(profile: &ToricProfile, e: usize) -> Option<((i64, i64), Q, bool)> {
    let verts = profile.vertices();
    let (mut nx, mut ny) = primitive_normal(&profile.edge_direction(e));
    let mut form = LinearForm { m1: nx, m2: ny };
    if !form.eval(&verts[e]).is_positive() {
        nx = -nx;
        ny = -ny;
        form = LinearForm { m1: nx, m2: ny };
    }
    let value = form.eval(&verts[e]);
    extrema(profile, &form)
        .into_iter()
        .find(|x| x.first == e && x.last == e + 1)
        .map(|x| ((nx, ny), value, x.is_min))
}

/// Smallest positive spectrum value.
pub fn min_spec(profile: &ToricProfile) -> Q {
    let bound = profile.rho_x().clone().min(profile.rho_y().clone());
    spectrum(profile, &bound)
        .expect("corner bound is positive")
        .into_iter()
        .map(|e| e.action)
        .min()
        .unwrap_or(bound)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Violation {
    /// An interior edge on which a form is constant and extremal.
    DegenerateEdge { form: LinearForm, edge: usize },
    /// A corner edge on which a form is constant and the corner plateau is
    /// a minimum: the corner is then critical for that form.
    CornerCritical { form: LinearForm, corner: CriticalKind },
    ActionCollision { first: Box<SpectrumEntry>, second: Box<SpectrumEntry> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NicenessReport {
    pub is_nice: bool,
    pub violations: Vec<Violation>,
    /// Corner multiplicities `m` with `m·t` integral. The corner index uses
    /// the ordinary floor there; listed for the record.
    pub integral_corner_multiples: Vec<(CriticalKind, i64)>,
}

/// Combinatorial genericity check up to action `a_max` and lines
/// `m₁+m₂ ≤ k_max + 1`.
pub fn check_nice(profile: &ToricProfile, a_max: &Q, k_max: i64) -> Result<NicenessReport> {
    let entries = spectrum(profile, a_max)?;
    let mut violations = Vec::new();
    for e in &entries {
        if e.point.kind == CriticalKind::Edge {
            violations.push(Violation::DegenerateEdge {
                form: e.point.form.expect("edge entries carry a form"),
                edge: e.point.vertex,
            });
        }
    }

    let n = profile.edge_count();
    let (t1, t2) = corner_slopes(profile)?;
    let mut integral = Vec::new();
    for (kind, edge, vertex, rho, t) in [
        (CriticalKind::CornerX, 0, 0, profile.rho_x(), &t1),
        (CriticalKind::CornerY, n - 1, n, profile.rho_y(), &t2),
    ] {
        let mut m = 1i64;
        while rho * qi(m) <= *a_max {
            if (t * qi(m)).denom().is_one() {
                integral.push((kind, m));
            }
            m += 1;
        }
        let (mut nx, mut ny) = primitive_normal(&profile.edge_direction(edge));
        let corner = &profile.vertices()[vertex];
        if !(LinearForm { m1: nx, m2: ny }).eval(corner).is_positive() {
            nx = -nx;
            ny = -ny;
        }
        let mut m = 1i64;
        loop {
            let form = LinearForm { m1: m * nx, m2: m * ny };
            let value = form.eval(corner);
            if value > *a_max && form.line() > k_max + 1 {
                break;
            }
            if extrema(profile, &form)
                .iter()
                .any(|x| x.is_min && (x.first == vertex || x.last == vertex))
            {
                violations.push(Violation::CornerCritical { form, corner: kind });
            }
            m += 1;
            if m > 1 + k_max.max(0) + floor_q(&(a_max / &value)).to_i64().unwrap_or(0) {
                break;
            }
        }
    }

    for w in entries.windows(2) {
        if w[0].action == w[1].action {
            violations.push(Violation::ActionCollision {
                first: Box::new(w[0].clone()),
                second: Box::new(w[1].clone()),
            });
        }
    }
    Ok(NicenessReport { is_nice: violations.is_empty(), violations, integral_corner_multiples: integral })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn tri() -> ToricProfile {
        ToricProfile::ellipsoid(qi(1), qi(1)).unwrap()
    }
    fn square() -> ToricProfile {
        ToricProfile::polydisk(qi(1), qi(1)).unwrap()
    }
    fn lshape() -> ToricProfile {
        ToricProfile::from_ints(&[(2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap()
    }
    fn golden() -> ToricProfile {
        ToricProfile::polydisk(qi(1), q(13, 8)).unwrap()
    }

    #[test]
    fn corner_slope_examples() {
        assert_eq!(corner_slopes(&tri()).unwrap(), (qi(1), qi(1)));
        assert_eq!(corner_slopes(&square()).unwrap(), (qi(0), qi(0)));
        let e = ToricProfile::ellipsoid(qi(1), qi(2)).unwrap();
        assert_eq!(corner_slopes(&e).unwrap(), (q(1, 2), qi(2)));
    }

    #[test]
    fn curve_parametrization() {
        let sq = square();
        let c = BoundaryCurve::new(&sq);
        assert_eq!(c.point_at(&qi(-2)), Point::from_ints(3, 0));
        assert_eq!(c.point_at(&q(1, 2)), Point::new(qi(1), q(1, 2)));
        assert_eq!(c.point_at(&qi(1)), Point::from_ints(1, 1));
        assert_eq!(c.point_at(&qi(5)), Point::from_ints(0, 4));
        let f = LinearForm { m1: 1, m2: 2 };
        let vals = c.vertex_values(&f);
        for u in [q(-7, 3), q(0, 1), q(3, 4), q(3, 2), qi(2), q(11, 3)] {
            assert_eq!(c.value_at(&f, &vals, &u), f.eval(&c.point_at(&u)));
        }
    }

    #[test]
    fn critical_point_examples() {
        let f = LinearForm { m1: 1, m2: 1 };
        assert!(matches!(
            critical_points(&tri(), &f),
            Err(Error::DegenerateEdge { edge: 0, .. })
        ));
        let cps = critical_points(&square(), &f).unwrap();
        assert_eq!(cps.len(), 1);
        assert_eq!(cps[0].location, Point::from_ints(1, 1));
        assert_eq!(cps[0].morse_index, Some(1));
        let cps = critical_points(&lshape(), &f).unwrap();
        let got: Vec<_> = cps
            .iter()
            .map(|c| (c.location.clone(), c.morse_index.unwrap(), f.eval(&c.location)))
            .collect();
        assert_eq!(
            got,
            vec![
                (Point::from_ints(2, 1), 1, qi(3)),
                (Point::from_ints(1, 1), 0, qi(2)),
                (Point::from_ints(1, 2), 1, qi(3)),
            ]
        );
    }

    #[test]
    fn triangle_spectrum_has_only_corners() {
        let s = spectrum(&tri(), &qi(3)).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s.iter().all(|e| matches!(e.point.kind, CriticalKind::CornerX | CriticalKind::CornerY)));
        let cx: Vec<_> = s
            .iter()
            .filter(|e| e.point.kind == CriticalKind::CornerX)
            .map(|e| (e.m, e.action.clone(), e.index))
            .collect();
        assert_eq!(cx, vec![(1, qi(1), 5), (2, qi(2), 9), (3, qi(3), 13)]);
    }

    #[test]
    fn square_spectrum() {
        let s = spectrum(&square(), &qi(2)).unwrap();
        let corner_x: Vec<_> =
            s.iter().filter(|e| e.point.kind == CriticalKind::CornerX).collect();
        assert_eq!((corner_x[0].action.clone(), corner_x[0].index), (qi(1), 3));
        let interior: Vec<_> =
            s.iter().filter(|e| e.point.kind == CriticalKind::Interior).collect();
        assert_eq!(interior.len(), 1);
        assert_eq!(interior[0].point.form, Some(LinearForm { m1: 1, m2: 1 }));
        assert_eq!(interior[0].action, qi(2));
        assert_eq!(interior[0].index, 4);
        assert_eq!(interior[0].point.morse_index, Some(1));
        assert!(spectrum(&square(), &q(1, 2)).unwrap().is_empty());
    }

    #[test]
    fn min_spec_examples() {
        assert_eq!(min_spec(&tri()), qi(1));
        assert_eq!(min_spec(&ToricProfile::polydisk(qi(1), qi(2)).unwrap()), qi(1));
        let c = q(7, 3);
        assert_eq!(min_spec(&lshape().scale(&c).unwrap()), min_spec(&lshape()) * c);
    }

    #[test]
    fn niceness() {
        let r = check_nice(&square(), &qi(4), 4).unwrap();
        assert!(!r.is_nice);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::ActionCollision { .. })));
        assert!(!check_nice(&tri(), &qi(3), 3).unwrap().is_nice);
        let g = check_nice(&golden(), &qi(6), 6).unwrap();
        assert!(g.is_nice, "{:?}", g.violations);
    }

    #[test]
    fn plateau_entries_are_reported() {
        // the horizontal edge (2,2)-(1,2) is a maximum of x₂
        let p = ToricProfile::new(vec![
            Point::from_ints(3, 0),
            Point::from_ints(3, 1),
            Point::from_ints(2, 2),
            Point::from_ints(1, 2),
            Point::new(qi(0), q(3, 2)),
        ])
        .unwrap();
        let s = spectrum(&p, &qi(2)).unwrap();
        let edge: Vec<_> = s.iter().filter(|e| e.point.kind == CriticalKind::Edge).collect();
        assert_eq!(edge.len(), 1);
        assert_eq!(edge[0].point.form, Some(LinearForm { m1: 0, m2: 1 }));
        assert_eq!(edge[0].action, qi(2));
        assert_eq!(edge[0].point.morse_index, Some(1));
        let r = check_nice(&p, &qi(2), 2).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::DegenerateEdge { edge: 2, .. })));
    }

    #[test]
    fn forms_on_line_covers_brute_force() {
        // every form on the line with a positive critical value below the
        // bound must be found
        let profiles = [tri(), square(), lshape(), golden()];
        let bound = qi(7);
        for p in &profiles {
            for line in -4..=8 {
                let found = forms_on_line(p, line, &bound, ConeScan::Extrema).unwrap();
                for m1 in -60..=60 {
                    let m2 = line - m1;
                    if !LinearForm::is_valid(m1, m2) {
                        continue;
                    }
                    let f = LinearForm { m1, m2 };
                    if critical_values(p, &f).iter().any(|v| *v < bound) {
                        assert!(found.contains(&m1), "{f} missing for {:?}", p.vertices());
                    }
                }
            }
        }
    }
}
