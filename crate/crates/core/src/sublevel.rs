//! Sublevel sets `{A < a} ∩ ∂₊Ω` as unions of open parameter intervals, the
//! relative homology of sublevel pairs, and the maps induced by inclusions.
//!
//! On a 1-manifold the pair `(X_b, X_a)` of open sublevels has
//!
//! * `H₀(X_b, X_a)` spanned by the components of `X_b` that miss `X_a`;
//! * `H₁(X_b, X_a) = ker(H₀(X_a) → H₀(X_b))`, spanned by the differences of
//!   consecutive components of `X_a` lying in one component of `X_b`. These
//!   "gaps" are the classes of the maxima of `A` inside the window.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::boundary::BoundaryCurve;
use crate::domain::{LinearForm, ToricProfile};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{fmt_q, midpoint, qi, Q};

/// A sublevel threshold in `(0, ∞]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Threshold {
    Finite(Q),
    Infinite,
}

impl Threshold {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Threshold::Finite(q) => Some(q),
            Threshold::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Threshold::Infinite)
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Threshold::Finite(a), Threshold::Finite(b)) => a.cmp(b),
            (Threshold::Finite(_), Threshold::Infinite) => Ordering::Less,
            (Threshold::Infinite, Threshold::Finite(_)) => Ordering::Greater,
            (Threshold::Infinite, Threshold::Infinite) => Ordering::Equal,
        }
    }
}

impl From<Q> for Threshold {
    fn from(q: Q) -> Self {
        Threshold::Finite(q)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(q) => write!(f, "{}", fmt_q(q)),
            Threshold::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An open parameter interval; `None` ends run off to the curve ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SublevelInterval {
    #[serde(serialize_with = "crate::io::ser_opt_q")]
    pub lo: Option<Q>,
    #[serde(serialize_with = "crate::io::ser_opt_q")]
    pub hi: Option<Q>,
}

impl SublevelInterval {
    pub fn contains(&self, u: &Q) -> bool {
        self.lo.as_ref().is_none_or(|l| u > l) && self.hi.as_ref().is_none_or(|h| u < h)
    }

    pub fn contains_interval(&self, other: &SublevelInterval) -> bool {
        let lo_ok = match (&self.lo, &other.lo) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a <= b,
        };
        let hi_ok = match (&self.hi, &other.hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a >= b,
        };
        lo_ok && hi_ok
    }

    /// Some parameter strictly inside the interval.
    pub fn sample(&self) -> Q {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) => midpoint(l, h),
            (Some(l), None) => l + qi(1),
            (None, Some(h)) => h - qi(1),
            (None, None) => Q::zero(),
        }
    }
}

impl fmt::Display for SublevelInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.as_ref().map_or("-inf".to_string(), fmt_q);
        let hi = self.hi.as_ref().map_or("inf".to_string(), fmt_q);
        write!(f, "({lo}, {hi})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SublevelDecomposition {
    pub form: LinearForm,
    pub threshold: Threshold,
    pub intervals: Vec<SublevelInterval>,
}

impl SublevelDecomposition {
    /// Index of the interval containing parameter `u`.
    pub fn locate(&self, u: &Q) -> Option<usize> {
        let idx = self.intervals.partition_point(|iv| iv.hi.as_ref().is_some_and(|h| h <= u));
        (idx < self.intervals.len() && self.intervals[idx].contains(u)).then_some(idx)
    }
}

/// What to do with edges on which the form is constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegeneracyPolicy {
    /// Refuse with a degenerate-edge error.
    #[default]
    Reject,
    /// Treat the plateau like any other piece of the curve (the open
    /// sublevel excludes it exactly when its value is `≥ a`).
    Allow,
}

fn check_degenerate(profile: &ToricProfile, form: &LinearForm) -> Result<()> {
    for e in 0..profile.edge_count() {
        if form.pair(&profile.edge_direction(e)).is_zero() {
            return Err(Error::DegenerateEdge { form: *form, edge: e });
        }
    }
    Ok(())
}

/// Maximal open intervals of `{A_f < a}` on `∂₊Ω`; rejects degenerate edges.
pub fn decompose(
    profile: &ToricProfile,
    form: &LinearForm,
    a: &Threshold,
) -> Result<SublevelDecomposition> {
    decompose_with(profile, form, a, DegeneracyPolicy::Reject)
}

pub fn decompose_with(
    profile: &ToricProfile,
    form: &LinearForm,
    a: &Threshold,
    policy: DegeneracyPolicy,
) -> Result<SublevelDecomposition> {
    if policy == DegeneracyPolicy::Reject {
        check_degenerate(profile, form)?;
    }
    let a = match a {
        Threshold::Infinite => {
            return Ok(SublevelDecomposition {
                form: *form,
                threshold: Threshold::Infinite,
                intervals: vec![SublevelInterval { lo: None, hi: None }],
            })
        }
        Threshold::Finite(a) if !a.is_positive() => {
            return Err(Error::InvalidThreshold(format!("threshold {} is not positive", fmt_q(a))))
        }
        Threshold::Finite(a) => a,
    };
    let curve = BoundaryCurve::new(profile);
    let values = curve.vertex_values(form);
    let n = curve.len();

    let mut breaks: Vec<Q> = (0..=n).map(|i| qi(i as i64)).collect();
    if form.m1 != 0 {
        let u = (&values[0] - a) / qi(form.m1);
        if u.is_negative() {
            breaks.push(u);
        }
    }
    if form.m2 != 0 {
        let u = qi(n as i64) + (a - &values[n]) / qi(form.m2);
        if u > qi(n as i64) {
            breaks.push(u);
        }
    }
    for i in 0..n {
        let (v0, v1) = (&values[i], &values[i + 1]);
        if v0 == v1 {
            continue;
        }
        let t = (a - v0) / (v1 - v0);
        if t.is_positive() && t < qi(1) {
            breaks.push(qi(i as i64) + t);
        }
    }
    breaks.sort();
    breaks.dedup();

    let below = |u: &Q| curve.value_at(form, &values, u) < *a;
    // alternating sequence: piece 0, point 0, piece 1, ..., point r-1, piece r
    let r = breaks.len();
    let mut intervals = Vec::new();
    let mut open: Option<Option<Q>> = None;
    for piece in 0..=r {
        let sample = match (piece.checked_sub(1).map(|p| &breaks[p]), breaks.get(piece)) {
            (Some(l), Some(h)) => midpoint(l, h),
            (None, Some(h)) => h - qi(1),
            (Some(l), None) => l + qi(1),
            (None, None) => Q::zero(),
        };
        let left_end = piece.checked_sub(1).map(|p| breaks[p].clone());
        if below(&sample) {
            if open.is_none() {
                open = Some(left_end);
            }
        } else if let Some(lo) = open.take() {
            intervals.push(SublevelInterval { lo, hi: left_end });
        }
        if piece < r && !below(&breaks[piece]) {
            if let Some(lo) = open.take() {
                intervals.push(SublevelInterval { lo, hi: Some(breaks[piece].clone()) });
            }
        }
    }
    if let Some(lo) = open {
        intervals.push(SublevelInterval { lo, hi: None });
    }
    Ok(SublevelDecomposition { form: *form, threshold: Threshold::Finite(a.clone()), intervals })
}

/// `H_*(X_b, X_a)` for `X_c = {A_f < c} ∩ ∂₊Ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativeHomology {
    pub form: LinearForm,
    pub lower: SublevelDecomposition,
    pub upper: SublevelDecomposition,
    /// Indices of `upper` intervals containing no `lower` interval.
    pub h0: Vec<usize>,
    /// One representative parameter per `h0` element.
    #[serde(serialize_with = "crate::io::ser_q_vec")]
    pub h0_representatives: Vec<Q>,
    /// Gap indices `s`: the class `[lower_{s+1}] − [lower_s]`, where both
    /// intervals lie in the same `upper` interval.
    pub h1: Vec<usize>,
}

impl RelativeHomology {
    pub fn rank(&self, degree: usize) -> usize {
        match degree {
            0 => self.h0.len(),
            1 => self.h1.len(),
            _ => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.h0.is_empty() && self.h1.is_empty()
    }
}

/// Canonical point of an interval: the vertex minimizing the form (ties to
/// the smallest parameter), or an interior sample if no vertex lies inside.
fn representative(values: &[Q], iv: &SublevelInterval) -> Q {
    let mut best: Option<(Q, Q)> = None;
    for (i, v) in values.iter().enumerate() {
        let u = qi(i as i64);
        if iv.contains(&u) && best.as_ref().is_none_or(|(bv, _)| v < bv) {
            best = Some((v.clone(), u));
        }
    }
    best.map_or_else(|| iv.sample(), |(_, u)| u)
}

/// Relative homology of the pair `(X_b, X_a)`; rejects degenerate edges.
pub fn relative_homology(
    profile: &ToricProfile,
    form: &LinearForm,
    a: &Q,
    b: &Threshold,
) -> Result<RelativeHomology> {
    relative_homology_with(profile, form, a, b, DegeneracyPolicy::Reject)
}

pub fn relative_homology_with(
    profile: &ToricProfile,
    form: &LinearForm,
    a: &Q,
    b: &Threshold,
    policy: DegeneracyPolicy,
) -> Result<RelativeHomology> {
    if b.finite().is_some_and(|b| b <= a) {
        return Err(Error::InvalidThreshold(format!("empty window [{}, {b})", fmt_q(a))));
    }
    let lower = decompose_with(profile, form, &Threshold::Finite(a.clone()), policy)?;
    let upper = decompose_with(profile, form, b, policy)?;
    let curve = BoundaryCurve::new(profile);
    let values = curve.vertex_values(form);

    let mut occupied = vec![false; upper.intervals.len()];
    let mut owners = Vec::with_capacity(lower.intervals.len());
    for iv in &lower.intervals {
        let o = upper.locate(&iv.sample()).ok_or_else(|| {
            Error::Contract(format!("sublevel interval {iv} escapes the upper sublevel"))
        })?;
        occupied[o] = true;
        owners.push(o);
    }
    let h0: Vec<usize> = (0..upper.intervals.len()).filter(|&i| !occupied[i]).collect();
    let h0_representatives =
        h0.iter().map(|&i| representative(&values, &upper.intervals[i])).collect();
    let h1 = (0..owners.len().saturating_sub(1)).filter(|&s| owners[s] == owners[s + 1]).collect();
    Ok(RelativeHomology { form: *form, lower, upper, h0, h0_representatives, h1 })
}

/// The map `H_*(Y_b, Y_a) → H_*(X_b′, X_a′)` induced by an inclusion of
/// pairs. Columns index the source basis, rows the target basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionMap {
    pub source_form: LinearForm,
    pub target_form: LinearForm,
    pub h0: Matrix,
    pub h1: Matrix,
}

impl InclusionMap {
    pub fn rank(&self) -> usize {
        self.h0.rank() + self.h1.rank()
    }
}

fn pair_map(source: &RelativeHomology, target: &RelativeHomology) -> Result<InclusionMap> {
    let mut h0 = Matrix::zeros(target.h0.len(), source.h0.len());
    for (col, rep) in source.h0_representatives.iter().enumerate() {
        let src_iv = &source.upper.intervals[source.h0[col]];
        let t = target
            .upper
            .locate(rep)
            .ok_or_else(|| Error::Contract("source sublevel escapes the target".into()))?;
        if !target.upper.intervals[t].contains_interval(src_iv) {
            return Err(Error::Contract(format!(
                "interval {src_iv} not contained in {}",
                target.upper.intervals[t]
            )));
        }
        if let Ok(row) = target.h0.binary_search(&t) {
            h0.set(row, col, qi(1));
        }
    }

    let mut h1 = Matrix::zeros(target.h1.len(), source.h1.len());
    if !source.h1.is_empty() {
        let loc = |iv: &SublevelInterval| -> Result<usize> {
            let t = target
                .lower
                .locate(&iv.sample())
                .ok_or_else(|| Error::Contract("source sublevel escapes the target".into()))?;
            if !target.lower.intervals[t].contains_interval(iv) {
                return Err(Error::Contract(format!("interval {iv} not contained in target")));
            }
            Ok(t)
        };
        for (col, &s) in source.h1.iter().enumerate() {
            let from = loc(&source.lower.intervals[s])?;
            let to = loc(&source.lower.intervals[s + 1])?;
            for gap in from..to {
                let row = target.h1.binary_search(&gap).map_err(|_| {
                    Error::Contract("gap image leaves the target kernel".into())
                })?;
                h1.add_to(row, col, &qi(1));
            }
        }
    }
    Ok(InclusionMap { source_form: source.form, target_form: target.form, h0, h1 })
}

/// Map induced by `{A_{f+e} < c} ⊂ {A_f < c}` for `e ∈ {(1,0),(0,1)}`;
/// both pairs must use the same window.
pub fn inclusion_map(source: &RelativeHomology, target: &RelativeHomology) -> Result<InclusionMap> {
    let (s, t) = (source.form, target.form);
    if s != t.shift1() && s != t.shift2() {
        return Err(Error::Contract(format!("{s} is not a unit shift of {t}")));
    }
    if source.lower.threshold != target.lower.threshold
        || source.upper.threshold != target.upper.threshold
    {
        return Err(Error::Contract("inclusion between different windows".into()));
    }
    pair_map(source, target)
}

/// Map induced by enlarging the window `[a,b) → [a′,b′)` for one form, with
/// `a ≤ a′` and `b ≤ b′`.
pub fn threshold_map(source: &RelativeHomology, target: &RelativeHomology) -> Result<InclusionMap> {
    if source.form != target.form {
        return Err(Error::Contract("threshold map between different forms".into()));
    }
    if source.lower.threshold > target.lower.threshold
        || source.upper.threshold > target.upper.threshold
    {
        return Err(Error::Contract("threshold map must enlarge the window".into()));
    }
    pair_map(source, target)
}
