//! The capacities `c_k(Ω) = inf{ a : H_{2k+1}[δ,a) → H_{2k+1}[δ,∞) ≠ 0 }`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::boundary::{critical_values, forms_on_line, min_spec, spectrum, ConeScan, SpectrumEntry};
use crate::domain::{includes, LinearForm, Point, ToricProfile};
use crate::error::{Error, Result};
use crate::homology::{assemble_e1, window_map_pages, E1Page, Window};
use crate::rational::{fmt_q, midpoint, qi, Q};
use crate::sublevel::Threshold;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityMethod {
    General,
    ConcaveFormula,
    ConvexFormula,
}

impl CapacityMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CapacityMethod::General => "general",
            CapacityMethod::ConcaveFormula => "concave_formula",
            CapacityMethod::ConvexFormula => "convex_formula",
        }
    }
}

/// Which algorithm [`capacity`] should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    /// A closed form when the region is concave or convex, else general.
    #[default]
    Auto,
    General,
    Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// A spectrum entry with the capacity as its action.
    Spectrum(Box<SpectrumEntry>),
    /// The optimal `j` of a closed form and the vertex attaining it.
    Formula {
        j: i64,
        form: LinearForm,
        #[serde(serialize_with = "crate::io::ser_point")]
        point: Point,
    },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Spectrum(e) => {
                write!(f, "{} m={} at {}", e.point.kind.as_str(), e.m, e.point.location)?;
                if let Some(form) = e.point.form {
                    write!(f, " form={form}")?;
                }
                Ok(())
            }
            Witness::Formula { j, form, point } => write!(f, "j={j} form={form} at {point}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapacityResult {
    pub k: i64,
    #[serde(serialize_with = "crate::io::ser_q")]
    pub value: Q,
    pub method: CapacityMethod,
    pub witness: Witness,
}

fn check_k(k: i64) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be at least 1, got {k}")));
    }
    Ok(())
}

/// All points where an affine form on `Ω` can be extremal on `∂₊Ω`.
fn boundary_vertices(profile: &ToricProfile) -> &[Point] {
    profile.vertices()
}

/// `max_{1≤j≤k} min_{∂₊Ω} A_{j,k+1−j}`.
///
/// The inner minimum is over all of the complement of the region in the
/// quadrant, but a form with positive coefficients grows along both axis
/// rays and is affine on every edge, so its minimum there is attained at a
/// vertex of `∂₊Ω`.
pub fn c_k_concave(profile: &ToricProfile, k: i64) -> Result<CapacityResult> {
    check_k(k)?;
    if !profile.classify().concave {
        return Err(Error::Contract("region is not concave".into()));
    }
    let mut best: Option<(Q, i64, LinearForm, Point)> = None;
    for j in 1..=k {
        let form = LinearForm { m1: j, m2: k + 1 - j };
        let (value, point) = boundary_vertices(profile)
            .iter()
            .map(|v| (form.eval(v), v))
            .min_by(|a, b| a.0.cmp(&b.0))
            .expect("profiles have vertices");
        if best.as_ref().is_none_or(|b| value > b.0) {
            best = Some((value, j, form, point.clone()));
        }
    }
    let (value, j, form, point) = best.expect("k ≥ 1");
    Ok(CapacityResult {
        k,
        value,
        method: CapacityMethod::ConcaveFormula,
        witness: Witness::Formula { j, form, point },
    })
}

/// `min_{0≤j≤k} max_Ω A_{j,k−j}`; on a convex polygon the maximum of an
/// affine form sits at a vertex.
pub fn c_k_convex(profile: &ToricProfile, k: i64) -> Result<CapacityResult> {
    check_k(k)?;
    if !profile.classify().weakly_convex {
        return Err(Error::Contract("region is not convex".into()));
    }
    let mut best: Option<(Q, i64, LinearForm, Point)> = None;
    for j in 0..=k {
        let form = LinearForm { m1: j, m2: k - j };
        let (value, point) = boundary_vertices(profile)
            .iter()
            .map(|v| (form.eval(v), v))
            .max_by(|a, b| a.0.cmp(&b.0))
            .expect("profiles have vertices");
        if best.as_ref().is_none_or(|b| value < b.0) {
            best = Some((value, j, form, point.clone()));
        }
    }
    let (value, j, form, point) = best.expect("k ≥ 0");
    Ok(CapacityResult {
        k,
        value,
        method: CapacityMethod::ConvexFormula,
        witness: Witness::Formula { j, form, point },
    })
}

/// Positive critical values `≤ bound` of the forms on lines `k` and `k+1`.
fn candidate_values(profile: &ToricProfile, k: i64, bound: &Q) -> Result<Vec<Q>> {
    let mut vals = Vec::new();
    for line in [k, k + 1] {
        for m1 in forms_on_line(profile, line, bound, ConeScan::Extrema)? {
            let form = LinearForm { m1, m2: line - m1 };
            vals.extend(critical_values(profile, &form).into_iter().filter(|v| v <= bound));
        }
    }
    vals.sort();
    vals.dedup();
    Ok(vals)
}

fn witness_for(profile: &ToricProfile, k: i64, value: &Q) -> Result<Witness> {
    let entries: Vec<SpectrumEntry> =
        spectrum(profile, value)?.into_iter().filter(|e| e.action == *value).collect();
    let degree = 2 * k + 1;
    let pick = entries
        .iter()
        .find(|e| e.index == degree || e.index + 1 == degree)
        .or_else(|| {
            entries.iter().find(|e| e.point.form.is_some_and(|f| f.line() == k || f.line() == k + 1))
        })
        .or(entries.first())
        .cloned()
        .ok_or_else(|| Error::Contract(format!("{} is not a spectrum value", fmt_q(value))))?;
    Ok(Witness::Spectrum(Box::new(pick)))
}

/// `c_k` from the filtered chain model.
///
/// `δ = min spec / 2`. The map `H_{2k+1}[δ,a) → H_{2k+1}[δ,∞)` only changes
/// when `a` crosses a critical value of a form on lines `k` or `k+1`, and its
/// nonvanishing is monotone in `a`, so a binary search over those values
/// (testing at the midpoint of each gap) finds the infimum. Since `Ω` lies
/// in the square of side `R = max coordinate`, `c_k ≤ kR` and the search
/// starts with that bound, doubling it if the test never passes.
pub fn c_k_general(profile: &ToricProfile, k: i64) -> Result<CapacityResult> {
    check_k(k)?;
    let delta = min_spec(profile) / qi(2);
    let target_w = Window::new(delta.clone(), Threshold::Infinite)?;
    let target = assemble_e1(profile, &target_w, k..=k + 1)?;

    let mut bound = profile.max_coordinate() * qi(k);
    for _ in 0..8 {
        let vals = candidate_values(profile, k, &(&bound * qi(2)))?;
        let top = vals.partition_point(|v| *v <= bound);
        let probe = |i: usize| -> Q {
            match vals.get(i + 1) {
                Some(next) => midpoint(&vals[i], next),
                None => midpoint(&vals[i], &(&bound * qi(2))),
            }
        };
        let passes = |i: usize| -> Result<bool> {
            let page = source_page(profile, &delta, &probe(i), k)?;
            Ok(window_map_pages(&page, &target, k)? > 0)
        };
        if top == 0 || !passes(top - 1)? {
            bound *= qi(2);
            continue;
        }
        // smallest passing index in [0, top)
        let (mut lo, mut hi) = (0usize, top - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if passes(mid)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let value = vals[lo].clone();
        let witness = witness_for(profile, k, &value)?;
        return Ok(CapacityResult { k, value, method: CapacityMethod::General, witness });
    }
    Err(Error::Truncation(format!("no capacity found for k = {k} below {}", fmt_q(&bound))))
}

fn source_page(profile: &ToricProfile, delta: &Q, a: &Q, k: i64) -> Result<E1Page> {
    let w = Window::new(delta.clone(), Threshold::Finite(a.clone()))?;
    assemble_e1(profile, &w, k..=k + 1)
}

pub fn capacity(profile: &ToricProfile, k: i64, method: MethodChoice) -> Result<CapacityResult> {
    let class = profile.classify();
    match method {
        MethodChoice::General => c_k_general(profile, k),
        MethodChoice::Formula | MethodChoice::Auto if class.concave => c_k_concave(profile, k),
        MethodChoice::Formula | MethodChoice::Auto if class.weakly_convex => c_k_convex(profile, k),
        MethodChoice::Auto => c_k_general(profile, k),
        MethodChoice::Formula => {
            Err(Error::Contract("no closed form for a region that is neither concave nor convex".into()))
        }
    }
}

/// `lim c_k / k = max_Ω min(x₁, x₂)`.
///
/// Moving a point radially outward increases both coordinates, so the
/// maximum is on `∂Ω`; on each edge `min(x₁,x₂)` is concave and piecewise
/// affine with a break only on the diagonal. The optimum need not be on the
/// diagonal: a spike below it can reach further.
pub fn asymptotic_limit(profile: &ToricProfile) -> Q {
    let verts = profile.vertices();
    let mut best = Q::zero();
    let mut consider = |p: &Point| {
        let m = p.x.clone().min(p.y.clone());
        if m > best {
            best = m;
        }
    };
    for v in verts {
        consider(v);
    }
    for w in verts.windows(2) {
        let (g0, g1) = (&w[0].x - &w[0].y, &w[1].x - &w[1].y);
        if (g0.is_positive() && g1.is_negative()) || (g0.is_negative() && g1.is_positive()) {
            let t = &g0 / (&g0 - &g1);
            consider(&w[0].add(&w[1].sub(&w[0]).scaled(&t)));
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    /// `None` when the second region is not contained in the first.
    pub monotonicity: Option<bool>,
    pub scaling: bool,
    pub spectrality: bool,
    pub nondecreasing: bool,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.monotonicity != Some(false) && self.scaling && self.spectrality && self.nondecreasing
    }
}

/// Checks monotonicity (`Ω′ ⊂ Ω ⇒ c_k(Ω′) ≤ c_k(Ω)`), scaling by `c`,
/// spectrality and monotonicity in `k` for `k ≤ k_max`, all with the
/// general method.
pub fn verify_properties(
    omega: &ToricProfile,
    omega_prime: &ToricProfile,
    c: &Q,
    k_max: i64,
) -> Result<PropertyReport> {
    check_k(k_max)?;
    let scaled = omega.scale(c)?;
    let values = |p: &ToricProfile| -> Result<Vec<Q>> {
        (1..=k_max).map(|k| c_k_general(p, k).map(|r| r.value)).collect()
    };
    let base = values(omega)?;
    let mut failures = Vec::new();

    let monotonicity = if includes(omega_prime, omega) {
        let inner = values(omega_prime)?;
        let mut ok = true;
        for (k, (i, o)) in inner.iter().zip(&base).enumerate() {
            if i > o {
                ok = false;
                failures.push(format!("monotonicity k={}: {} > {}", k + 1, fmt_q(i), fmt_q(o)));
            }
        }
        Some(ok)
    } else {
        None
    };

    let mut scaling = true;
    for (k, (s, b)) in values(&scaled)?.iter().zip(&base).enumerate() {
        if *s != b * c {
            scaling = false;
            failures.push(format!("scaling k={}: {} != {}·{}", k + 1, fmt_q(s), fmt_q(c), fmt_q(b)));
        }
    }

    let mut spectrality = true;
    for (k, v) in base.iter().enumerate() {
        if !spectrum(omega, v)?.iter().any(|e| e.action == *v) {
            spectrality = false;
            failures.push(format!("spectrality k={}: {} not in spec", k + 1, fmt_q(v)));
        }
    }

    let mut nondecreasing = true;
    for (k, w) in base.windows(2).enumerate() {
        if w[0] > w[1] {
            nondecreasing = false;
            failures.push(format!("c_{} > c_{}", k + 1, k + 2));
        }
    }
    Ok(PropertyReport { monotonicity, scaling, spectrality, nondecreasing, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn ball() -> ToricProfile {
        ToricProfile::ellipsoid(qi(1), qi(1)).unwrap()
    }

    /// Brute-force `max_j min_{x ∈ ∂₊Ω}` over a dense sample of the boundary.
    fn concave_oracle(p: &ToricProfile, k: i64) -> Q {
        let curve = crate::boundary::BoundaryCurve::new(p);
        let n = p.edge_count() as i64;
        (1..=k)
            .map(|j| {
                let f = LinearForm { m1: j, m2: k + 1 - j };
                (0..=n * 24).map(|s| f.eval(&curve.point_at(&q(s, 24)))).min().unwrap()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn ball_capacities() {
        let expect = [1, 1, 2, 2, 3, 3];
        for (k, e) in (1..=6).zip(expect) {
            assert_eq!(c_k_general(&ball(), k).unwrap().value, qi(e));
            assert_eq!(c_k_concave(&ball(), k).unwrap().value, qi(e));
            assert_eq!(concave_oracle(&ball(), k), qi(e));
        }
    }

    #[test]
    fn polydisk_capacities() {
        let p = ToricProfile::polydisk(qi(1), qi(2)).unwrap();
        for k in 1..=5 {
            assert_eq!(c_k_general(&p, k).unwrap().value, qi(k));
            assert_eq!(c_k_convex(&p, k).unwrap().value, qi(k));
        }
        let p = ToricProfile::polydisk(qi(1), qi(1)).unwrap();
        assert_eq!(c_k_convex(&p, 4).unwrap().value, qi(4));
        let p = ToricProfile::polydisk(qi(2), qi(1)).unwrap();
        assert_eq!(c_k_convex(&p, 3).unwrap().value, qi(3));
        assert_eq!(c_k_convex(&ball(), 2).unwrap().value, qi(1));
    }

    #[test]
    fn concave_formula_examples() {
        assert_eq!(c_k_concave(&ball(), 3).unwrap().value, qi(2));
        let e = ToricProfile::ellipsoid(qi(1), qi(2)).unwrap();
        let r = c_k_concave(&e, 3).unwrap();
        assert_eq!(r.value, qi(2));
        let Witness::Formula { j, .. } = r.witness else { panic!() };
        assert!(j == 2 || j == 3);
        let sq = ToricProfile::polydisk(qi(1), qi(1)).unwrap();
        assert!(matches!(c_k_concave(&sq, 2), Err(Error::Contract(_))));
        let l = ToricProfile::from_ints(&[(2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(c_k_convex(&l, 2), Err(Error::Contract(_))));
        assert!(matches!(capacity(&l, 2, MethodChoice::Formula), Err(Error::Contract(_))));
    }

    #[test]
    fn scaled_ball() {
        let p = ball().scale(&qi(3)).unwrap();
        assert_eq!(c_k_general(&p, 4).unwrap().value, qi(6));
    }

    #[test]
    fn witness_reproduces_value() {
        let l = ToricProfile::from_ints(&[(2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap();
        for k in 1..=4 {
            let r = c_k_general(&l, k).unwrap();
            let Witness::Spectrum(e) = &r.witness else { panic!() };
            assert_eq!(e.action, r.value);
        }
        let r = c_k_concave(&ball(), 5).unwrap();
        let Witness::Formula { form, point, .. } = &r.witness else { panic!() };
        assert_eq!(form.eval(point), r.value);
    }

    #[test]
    fn asymptotic_examples() {
        assert_eq!(asymptotic_limit(&ball()), q(1, 2));
        assert_eq!(asymptotic_limit(&ToricProfile::polydisk(qi(2), qi(1)).unwrap()), qi(1));
        let l = ToricProfile::from_ints(&[(2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(asymptotic_limit(&l), qi(1));
        // a spike below the diagonal beats the diagonal exit point
        let spike = ToricProfile::from_ints(&[(1, 0), (10, 8), (1, 1), (0, 1)]).unwrap();
        assert_eq!(asymptotic_limit(&spike), qi(8));
    }

    #[test]
    fn property_report() {
        let sq = ToricProfile::polydisk(qi(1), qi(1)).unwrap();
        let r = verify_properties(&sq, &ball(), &qi(2), 5).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures);
        assert_eq!(r.monotonicity, Some(true));
        let r = verify_properties(&ball(), &ball(), &q(5, 3), 3).unwrap();
        assert_eq!(r.monotonicity, Some(true));
        assert!(r.all_pass());
    }
}
