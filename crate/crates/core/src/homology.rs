//! The E¹ page of the filtration by `p = m₁ + m₂` and the homology of
//! window complexes.
//!
//! For a window `[a,b)` the page has, on each line `p`, the blocks
//! `H_i(X_b, X_a) ⊗ e_j` of the forms on that line, in total degree
//! `2p − 1 + i + j`. The only nonzero differential sends the `e₀` blocks of
//! line `p+1` to the `e₁` blocks of line `p`:
//!
//! ```text
//! (D x)_{m₁,m₂} = ± (m₂ · x_{m₁+1,m₂} − m₁ · x_{m₁,m₂+1})
//! ```
//!
//! with the components pushed through the inclusion-induced maps. Higher
//! differentials vanish, so
//!
//! ```text
//! H_{2k+1} = ker D_{k,0} ⊕ coker D_{k,1}
//! H_{2k}   = coker D_{k,0} ⊕ ker D_{k−1,1}
//! ```
//!
//! where `D_{p,i}` is the differential on `H_i` blocks from line `p+1` to
//! line `p`.
//!
//! Only finitely many forms on a line carry nonzero blocks. A class of
//! `H₀(X_b, X_a)` sits on a minimum with value in `[a,b)`, a class of
//! `H₁(X_b, X_a)` on a maximum in `[a,b)`. For `b = ∞` the `H₀` classes are
//! the positive forms with `X_a = ∅`, and the `H₁` classes need two
//! components of `X_a`; at most one of them meets the arc `{A ≤ 0}` (a
//! half-plane through the origin cuts a star-shaped curve in one arc), so
//! the form has a local minimum with value in `(0,a)`. In every case the
//! vertex-cone scan of [`crate::boundary`] with bound `b` (or `a` when
//! `b = ∞`) finds all contributing forms.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::boundary::{critical_values, forms_on_line, min_spec, spectrum, ConeScan};
use crate::domain::{LinearForm, ToricProfile};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{fmt_q, midpoint, qi, Q};
use crate::sublevel::{
    inclusion_map, relative_homology_with, threshold_map, DegeneracyPolicy, RelativeHomology,
    Threshold,
};

/// Forms just outside the scanned range on each line that must carry zero
/// blocks; a nonzero one would mean the scan missed something.
pub const DEFAULT_TRUNCATION_MARGIN: i64 = 2;

/// A window `[a, b)` with `0 < a < b ≤ ∞`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Window {
    #[serde(serialize_with = "crate::io::ser_q")]
    pub a: Q,
    pub b: Threshold,
}

impl Window {
    pub fn new(a: Q, b: Threshold) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidThreshold(format!("window start {} must be positive", fmt_q(&a))));
        }
        if b.finite().is_some_and(|b| *b <= a) {
            return Err(Error::InvalidThreshold(format!("empty window [{}, {b})", fmt_q(&a))));
        }
        Ok(Window { a, b })
    }

    /// Bound for the per-line form scan.
    fn scan_bound(&self) -> &Q {
        self.b.finite().unwrap_or(&self.a)
    }
}

/// Moves a threshold that lands on the spectrum down to the middle of the
/// gap below it. Returns the (possibly new) value and whether it moved.
pub fn snap_threshold(profile: &ToricProfile, x: &Q) -> Result<(Q, bool)> {
    if !x.is_positive() {
        return Err(Error::InvalidThreshold(format!("threshold {} must be positive", fmt_q(x))));
    }
    let values: Vec<Q> = spectrum(profile, x)?.into_iter().map(|e| e.action).collect();
    if values.last() != Some(x) {
        return Ok((x.clone(), false));
    }
    let below = values.iter().rev().find(|v| *v < x).cloned().unwrap_or_else(Q::zero);
    Ok((midpoint(&below, x), true))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormBlock {
    pub form: LinearForm,
    pub homology: RelativeHomology,
}

impl FormBlock {
    pub fn dim(&self, i: usize) -> usize {
        self.homology.rank(i)
    }
}

/// Nonzero blocks of the E¹ page for a window, line by line. Forms on a line
/// are sorted by `m₁`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E1Page {
    pub window: Window,
    pub lines: BTreeMap<i64, Vec<FormBlock>>,
}

impl E1Page {
    pub fn blocks(&self, line: i64) -> &[FormBlock] {
        self.lines.get(&line).map_or(&[], |v| v.as_slice())
    }

    /// Dimension of the `H_i` part of line `line`.
    pub fn dim(&self, line: i64, i: usize) -> usize {
        self.blocks(line).iter().map(|b| b.dim(i)).sum()
    }

    /// Starting row of each block of `line` in the stacked `H_i` basis.
    fn offsets(&self, line: i64, i: usize) -> Vec<usize> {
        let mut acc = 0;
        self.blocks(line)
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.dim(i);
                o
            })
            .collect()
    }

    fn find(&self, line: i64, form: &LinearForm) -> Option<usize> {
        self.blocks(line).binary_search_by_key(&form.m1, |b| b.form.m1).ok()
    }

    fn require(&self, line: i64) -> Result<()> {
        if self.lines.contains_key(&line) {
            Ok(())
        } else {
            Err(Error::Contract(format!("line {line} not assembled")))
        }
    }
}

fn line_candidates(profile: &ToricProfile, window: &Window, line: i64) -> Result<Vec<i64>> {
    let mut s = forms_on_line(profile, line, window.scan_bound(), ConeScan::Extrema)?;
    if window.b.is_infinite() {
        s.extend(1..line);
        s.sort_unstable();
        s.dedup();
    }
    Ok(s)
}

fn block_for(profile: &ToricProfile, window: &Window, form: LinearForm) -> Result<Option<FormBlock>> {
    let homology =
        relative_homology_with(profile, &form, &window.a, &window.b, DegeneracyPolicy::Allow)?;
    if homology.is_zero() {
        return Ok(None);
    }
    Ok(Some(FormBlock { form, homology }))
}

fn check_boundary(profile: &ToricProfile, window: &Window, form: &LinearForm) -> Result<()> {
    let values = critical_values(profile, form);
    for t in [Some(&window.a), window.b.finite()].into_iter().flatten() {
        if values.binary_search(t).is_ok() {
            return Err(Error::SpectrumBoundary { value: t.clone() });
        }
    }
    Ok(())
}

/// Assembles lines `lines` of the page, checking that the window avoids the
/// spectrum and that forms within `DEFAULT_TRUNCATION_MARGIN` of the
/// scanned range carry nothing.
pub fn assemble_e1(
    profile: &ToricProfile,
    window: &Window,
    lines: RangeInclusive<i64>,
) -> Result<E1Page> {
    assemble_e1_with_margin(profile, window, lines, DEFAULT_TRUNCATION_MARGIN)
}

pub fn assemble_e1_with_margin(
    profile: &ToricProfile,
    window: &Window,
    lines: RangeInclusive<i64>,
    margin: i64,
) -> Result<E1Page> {
    let jobs: Vec<(i64, Vec<i64>, Vec<i64>)> = lines
        .map(|line| {
            let cand = line_candidates(profile, window, line)?;
            let mut outside = Vec::new();
            if let (Some(&lo), Some(&hi)) = (cand.first(), cand.last()) {
                outside.extend((lo - margin..lo).chain(hi + 1..=hi + margin));
            } else {
                outside.extend(-margin..=margin);
            }
            outside.retain(|&s| LinearForm::is_valid(s, line - s));
            Ok((line, cand, outside))
        })
        .collect::<Result<_>>()?;

    let results: Vec<(i64, Vec<FormBlock>)> = jobs
        .into_par_iter()
        .map(|(line, cand, outside)| {
            let mut blocks = Vec::new();
            for s in cand {
                let form = LinearForm { m1: s, m2: line - s };
                check_boundary(profile, window, &form)?;
                if let Some(b) = block_for(profile, window, form)? {
                    blocks.push(b);
                }
            }
            for s in outside {
                let form = LinearForm { m1: s, m2: line - s };
                if block_for(profile, window, form)?.is_some() {
                    return Err(Error::Truncation(format!(
                        "form {form} outside the scanned range carries homology"
                    )));
                }
            }
            Ok((line, blocks))
        })
        .collect::<Result<_>>()?;
    Ok(E1Page { window: window.clone(), lines: results.into_iter().collect() })
}

/// `D_{p,i}`: `H_i ⊗ e₀` blocks of line `p+1` to `H_i ⊗ e₁` blocks of line `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialMatrix {
    /// Target line `p`.
    pub line: i64,
    /// Homological degree `i` of the blocks.
    pub degree: usize,
    /// The global sign `(−1)^{|x|}`; ranks do not depend on it.
    pub sign: i8,
    pub matrix: Matrix,
    /// Row labels: target form and basis index within its block.
    pub rows: Vec<(LinearForm, usize)>,
    pub cols: Vec<(LinearForm, usize)>,
}

fn labels(page: &E1Page, line: i64, i: usize) -> Vec<(LinearForm, usize)> {
    page.blocks(line)
        .iter()
        .flat_map(|b| (0..b.dim(i)).map(move |j| (b.form, j)))
        .collect()
}

pub fn differential(page: &E1Page, line: i64, i: usize) -> Result<DifferentialMatrix> {
    page.require(line)?;
    page.require(line + 1)?;
    let rows = page.dim(line, i);
    let cols = page.dim(line + 1, i);
    let row_off = page.offsets(line, i);
    let col_off = page.offsets(line + 1, i);
    let mut m = Matrix::zeros(rows, cols);
    for (ti, target) in page.blocks(line).iter().enumerate() {
        if target.dim(i) == 0 {
            continue;
        }
        let f = target.form;
        for (source_form, coeff) in [(f.shift1(), f.m2), (f.shift2(), -f.m1)] {
            if coeff == 0 {
                continue;
            }
            let Some(si) = page.find(line + 1, &source_form) else { continue };
            let source = &page.blocks(line + 1)[si];
            if source.dim(i) == 0 {
                continue;
            }
            let map = inclusion_map(&source.homology, &target.homology)?;
            let block = if i == 0 { &map.h0 } else { &map.h1 };
            let c = qi(coeff);
            for r in 0..block.rows() {
                for k in 0..block.cols() {
                    let x = block.get(r, k);
                    if !x.is_zero() {
                        m.add_to(row_off[ti] + r, col_off[si] + k, &(x * &c));
                    }
                }
            }
        }
    }
    let sign = if (1 + i) % 2 == 0 { 1 } else { -1 };
    Ok(DifferentialMatrix {
        line,
        degree: i,
        sign,
        matrix: m,
        rows: labels(page, line, i),
        cols: labels(page, line + 1, i),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub window: Window,
    pub betti: BTreeMap<i64, usize>,
}

impl BettiTable {
    pub fn get(&self, n: i64) -> usize {
        self.betti.get(&n).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.betti.values().all(|&b| b == 0)
    }

    /// Degrees with nonzero Betti number.
    pub fn support(&self) -> Vec<(i64, usize)> {
        self.betti.iter().filter(|(_, &b)| b > 0).map(|(&n, &b)| (n, b)).collect()
    }
}

fn line_range(degrees: &RangeInclusive<i64>) -> RangeInclusive<i64> {
    let lo = degrees.start().div_euclid(2) - 1;
    let hi = degrees.end().div_euclid(2) + 1;
    lo..=hi
}

/// Homology of the window complex in each requested degree.
pub fn betti(profile: &ToricProfile, window: &Window, degrees: RangeInclusive<i64>) -> Result<BettiTable> {
    let page = assemble_e1(profile, window, line_range(&degrees))?;
    betti_from_page(&page, degrees)
}

pub fn betti_from_page(page: &E1Page, degrees: RangeInclusive<i64>) -> Result<BettiTable> {
    let mut ranks: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    let mut rank = |line: i64, i: usize| -> Result<usize> {
        if let Some(&r) = ranks.get(&(line, i)) {
            return Ok(r);
        }
        let r = differential(page, line, i)?.matrix.rank();
        ranks.insert((line, i), r);
        Ok(r)
    };
    let mut betti = BTreeMap::new();
    for n in degrees {
        let k = n.div_euclid(2);
        let b = if n.rem_euclid(2) == 1 {
            let null0 = page.dim(k + 1, 0) - rank(k, 0)?;
            let coker1 = page.dim(k, 1) - rank(k, 1)?;
            null0 + coker1
        } else {
            let coker0 = page.dim(k, 0) - rank(k, 0)?;
            let null1 = page.dim(k, 1) - rank(k - 1, 1)?;
            coker0 + null1
        };
        betti.insert(n, b);
    }
    Ok(BettiTable { window: page.window.clone(), betti })
}

fn require_small_delta(profile: &ToricProfile, delta: &Q) -> Result<()> {
    if !delta.is_positive() || *delta >= min_spec(profile) {
        return Err(Error::InvalidParameter(format!(
            "delta {} must lie in (0, min spec)",
            fmt_q(delta)
        )));
    }
    Ok(())
}

fn require_no_h1(page: &E1Page, line: i64) -> Result<()> {
    if page.dim(line, 1) != 0 {
        return Err(Error::Contract(format!("unexpected H1 blocks on line {line}")));
    }
    Ok(())
}

/// Basis of `ker D_{line−1,0}` as vectors over the `H₀` basis of `line`.
fn kernel_on_line(page: &E1Page, line: i64) -> Result<Vec<Vec<Q>>> {
    Ok(differential(page, line - 1, 0)?.matrix.kernel_basis())
}

/// Pushes a vector on line `line` of `source` forward to `target` through
/// the per-form threshold maps.
fn push_forward(source: &E1Page, target: &E1Page, line: i64, v: &[Q]) -> Result<Vec<Q>> {
    let src_off = source.offsets(line, 0);
    let tgt_off = target.offsets(line, 0);
    let mut out = vec![Q::zero(); target.dim(line, 0)];
    for (si, block) in source.blocks(line).iter().enumerate() {
        let Some(ti) = target.find(line, &block.form) else { continue };
        let tb = &target.blocks(line)[ti];
        let map = threshold_map(&block.homology, &tb.homology)?;
        let x = &v[src_off[si]..src_off[si] + block.dim(0)];
        for (r, y) in map.h0.mul_vec(x).into_iter().enumerate() {
            out[tgt_off[ti] + r] += y;
        }
    }
    Ok(out)
}

/// Rank of `H_{2k+1}[δ,a) → H_{2k+1}[δ,a′)` for `0 < δ < min spec`.
///
/// With `δ` below the spectrum every `X_δ` is connected or empty, so no
/// `H₁` blocks occur and `H_{2k+1}` is `ker D_{k,0}` on line `k+1`.
pub fn window_map(
    profile: &ToricProfile,
    delta: &Q,
    a: &Q,
    a_prime: &Threshold,
    k: i64,
) -> Result<usize> {
    require_small_delta(profile, delta)?;
    let source_w = Window::new(delta.clone(), Threshold::Finite(a.clone()))?;
    let target_w = Window::new(delta.clone(), a_prime.clone())?;
    if Threshold::Finite(a.clone()) > *a_prime {
        return Err(Error::InvalidThreshold("window map must enlarge the window".into()));
    }
    let source = assemble_e1(profile, &source_w, k..=k + 1)?;
    let target = assemble_e1(profile, &target_w, k..=k + 1)?;
    window_map_pages(&source, &target, k)
}

pub(crate) fn window_map_pages(source: &E1Page, target: &E1Page, k: i64) -> Result<usize> {
    require_no_h1(source, k + 1)?;
    require_no_h1(target, k + 1)?;
    let kernel = kernel_on_line(source, k + 1)?;
    if kernel.is_empty() {
        return Ok(0);
    }
    let images = kernel
        .iter()
        .map(|v| push_forward(source, target, k + 1, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(target.dim(k + 1, 0), &images).rank())
}

/// Rank of the shift-sum map `H_{2k+3}[δ,∞) → H_{2k+1}[δ,∞)`,
/// `(ux)_{m₁,m₂} = x_{m₁+1,m₂} + x_{m₁,m₂+1}`.
pub fn u_map_rank(profile: &ToricProfile, delta: &Q, k: i64) -> Result<usize> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    require_small_delta(profile, delta)?;
    let window = Window::new(delta.clone(), Threshold::Infinite)?;
    let page = assemble_e1(profile, &window, k..=k + 2)?;
    require_no_h1(&page, k + 1)?;
    require_no_h1(&page, k + 2)?;
    let kernel = kernel_on_line(&page, k + 2)?;
    let off_src = page.offsets(k + 2, 0);
    let off_tgt = page.offsets(k + 1, 0);
    let mut images = Vec::new();
    for v in &kernel {
        let mut out = vec![Q::zero(); page.dim(k + 1, 0)];
        for (ti, target) in page.blocks(k + 1).iter().enumerate() {
            for source_form in [target.form.shift1(), target.form.shift2()] {
                let Some(si) = page.find(k + 2, &source_form) else { continue };
                let source = &page.blocks(k + 2)[si];
                let map = inclusion_map(&source.homology, &target.homology)?;
                let x = &v[off_src[si]..off_src[si] + source.dim(0)];
                for (r, y) in map.h0.mul_vec(x).into_iter().enumerate() {
                    out[off_tgt[ti] + r] += y;
                }
            }
        }
        images.push(out);
    }
    let image_rank = Matrix::from_columns(page.dim(k + 1, 0), &images).rank();
    // the image must consist of cycles
    let d = differential(&page, k, 0)?;
    for w in &images {
        if d.matrix.mul_vec(w).iter().any(|x| !x.is_zero()) {
            return Err(Error::Contract("u map does not preserve cycles".into()));
        }
    }
    Ok(image_rank)
}
