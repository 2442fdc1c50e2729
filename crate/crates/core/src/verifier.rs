//! Brute-force checks of the construction on concrete instances: exhaustive
//! monochromatic-progression search, pigeonhole return-time certificates,
//! and the divisibility lemma `eta >= delta`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::chessboard::{
    color_of_integer, f_map, mini_cell_of, Chessboard, ChessboardParams, MiniCellIndex,
};
use crate::coloring::{Coloring, FnColoring};
use crate::diophantine::{bohr_gap, AlphaVector, BohrThreshold};
use crate::error::{Error, Result};
use crate::rational::{dist_to_multiple, format_rational, int, lift_nearest_zero, Rational};

/// Progressions `x, x + y, ..., x + (len - 1) y` with `x` in `[x_lo, x_hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct APQuery {
    diff: i64,
    len: usize,
    x_lo: i64,
    x_hi: i64,
}

impl APQuery {
    pub fn new(diff: i64, len: usize, x_lo: i64, x_hi: i64) -> Result<Self> {
        if diff == 0 {
            return Err(Error::param("y", "difference must be nonzero"));
        }
        if len < 2 {
            return Err(Error::param("L", format!("length {len} < 2")));
        }
        if x_lo > x_hi {
            return Err(Error::param("x_lo", format!("{x_lo} > x_hi = {x_hi}")));
        }
        Ok(APQuery {
            diff,
            len,
            x_lo,
            x_hi,
        })
    }

    pub fn diff(&self) -> i64 {
        self.diff
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn x_lo(&self) -> i64 {
        self.x_lo
    }
    pub fn x_hi(&self) -> i64 {
        self.x_hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct APReport {
    pub query: APQuery,
    pub found: bool,
    /// Smallest start of a monochromatic progression of the full length.
    pub witness_x: Option<i64>,
    /// Longest monochromatic run `x, x + y, ...` over starts in the window, capped at `len`.
    pub max_len_seen: usize,
}

/// Exhaustive search for a monochromatic progression.
///
/// Starts are grouped by residue class modulo `|y|`; each class is one long
/// progression whose run lengths are computed in a single pass, so every
/// position is colored once.
pub fn mono_ap_exists<C: Coloring + ?Sized>(coloring: &C, query: &APQuery) -> APReport {
    let cap = query.len;
    let span = (cap - 1) as i64;
    let stride = query.diff.abs();
    let width = query.x_hi - query.x_lo + 1;
    let mut colors = Vec::new();
    let mut runs: Vec<usize> = Vec::new();
    let mut max_len_seen = 0usize;
    let mut witness: Option<i64> = None;

    for class in 0..stride.min(width) {
        let first = query.x_lo + class;
        let n_starts = ((query.x_hi - first) / stride + 1) as usize;
        let chain_len = n_starts + span as usize;
        // Runs read forward from each start when y > 0 and backward when y < 0.
        let (chain_lo, start_offset) = if query.diff > 0 {
            (first, 0usize)
        } else {
            (first - span * stride, span as usize)
        };
        coloring.progression(chain_lo, stride, chain_len, &mut colors);
        runs.clear();
        runs.resize(chain_len, 1);
        if query.diff > 0 {
            for m in (0..chain_len - 1).rev() {
                if colors[m] == colors[m + 1] {
                    runs[m] = (runs[m + 1] + 1).min(cap);
                }
            }
        } else {
            for m in 1..chain_len {
                if colors[m] == colors[m - 1] {
                    runs[m] = (runs[m - 1] + 1).min(cap);
                }
            }
        }
        for i in 0..n_starts {
            let run = runs[start_offset + i];
            max_len_seen = max_len_seen.max(run);
            if run >= cap {
                let x = first + i as i64 * stride;
                witness = Some(witness.map_or(x, |w| w.min(x)));
                break;
            }
        }
    }

    if let Some(x) = witness {
        debug_assert!(
            (0..cap as i64).all(|j| coloring.color(x + j * query.diff) == coloring.color(x)),
            "witness {x} is not monochromatic"
        );
    }
    APReport {
        query: query.clone(),
        found: witness.is_some(),
        witness_x: witness,
        max_len_seen,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Serial,
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub y: i64,
    pub bohr_gap: Rational,
    pub in_s: bool,
    pub report: APReport,
}

/// Runs [`mono_ap_exists`] for every difference in `[y_lo, y_hi]` against the
/// board's pullback coloring, over starts `x` in `[0, N2]`.
pub fn scan_differences(
    board: &Chessboard,
    y_lo: i64,
    y_hi: i64,
    len: usize,
    mode: ScanMode,
) -> Result<Vec<ScanRow>> {
    let params = board.params();
    let window = (0, params.horizon() as i64);
    match board.pullback() {
        Ok(fast) => scan_differences_with(
            &fast,
            params.alphas(),
            params.delta(),
            (y_lo, y_hi),
            len,
            window,
            mode,
        ),
        Err(Error::Overflow(_)) => {
            let exact = FnColoring(|x| color_of_integer(x, board));
            scan_differences_with(
                &exact,
                params.alphas(),
                params.delta(),
                (y_lo, y_hi),
                len,
                window,
                mode,
            )
        }
        Err(e) => Err(e),
    }
}

/// [`scan_differences`] for an arbitrary coloring. Rows come back sorted by
/// `y` whatever the mode.
pub fn scan_differences_with<C: Coloring + ?Sized>(
    coloring: &C,
    alphas: &AlphaVector,
    delta: &BohrThreshold,
    (y_lo, y_hi): (i64, i64),
    len: usize,
    (x_lo, x_hi): (i64, i64),
    mode: ScanMode,
) -> Result<Vec<ScanRow>> {
    if y_lo < 1 {
        return Err(Error::param("y_lo", format!("{y_lo} < 1")));
    }
    if y_hi < y_lo {
        return Err(Error::param("y_hi", format!("{y_hi} < y_lo = {y_lo}")));
    }
    // Validate once so the per-row construction cannot fail.
    APQuery::new(y_lo, len, x_lo, x_hi)?;
    let row = |y: i64| {
        let query = APQuery::new(y, len, x_lo, x_hi).expect("validated above");
        let gap = bohr_gap(y, alphas);
        ScanRow {
            y,
            in_s: gap > *delta.value(),
            bohr_gap: gap,
            report: mono_ap_exists(coloring, &query),
        }
    };
    let rows = match mode {
        ScanMode::Serial => (y_lo..=y_hi).map(row).collect(),
        ScanMode::Parallel => (y_lo..=y_hi).into_par_iter().map(row).collect(),
    };
    Ok(rows)
}

pub const SCAN_CSV_HEADER: &str = "y,bohr_gap,in_S,max_len_seen,witness_x";

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(SCAN_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let witness = r.report.witness_x.map(|x| x.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.y,
            format_rational(&r.bohr_gap),
            r.in_s,
            r.report.max_len_seen,
            witness
        ));
    }
    out
}

/// True when some difference in the restricted set has a full-length
/// monochromatic progression, i.e. the construction failed on this window.
pub fn construction_failed(rows: &[ScanRow]) -> bool {
    rows.iter().any(|r| r.in_s && r.report.found)
}

/// Two points `F(x + a y)` and `F(x + b y)` sharing a mini-cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnCertificate {
    pub x: i64,
    pub y: i64,
    /// `b - a`.
    pub t: u64,
    pub a: u64,
    pub b: u64,
    pub mini: MiniCellIndex,
    /// The representative of `F(t y)` in `[-N1/2, N1/2)^d`.
    pub disp: Vec<Rational>,
    /// Whether `t | N1`.
    pub divides_period: bool,
}

impl ReturnCertificate {
    /// Recomputes every claim of the certificate from scratch.
    pub fn verify(&self, params: &ChessboardParams) -> bool {
        let point = |i: u64| f_map(BigInt::from(self.x) + BigInt::from(self.y) * i, params);
        let period = params.period_big();
        let ty = f_map(BigInt::from(self.y) * self.t, params);
        let disp_ok = self.disp.len() == params.dim()
            && self
                .disp
                .iter()
                .zip(ty.coords())
                .all(|(d, c)| lift_nearest_zero(c, &period) == *d);
        let bound = params.mini_cell_side();
        self.b > self.a
            && self.t == self.b - self.a
            && self.t <= params.pigeonhole_bound()
            && mini_cell_of(&point(self.a), params) == self.mini
            && mini_cell_of(&point(self.b), params) == self.mini
            && disp_ok
            && self.disp.iter().all(|d| d.abs() <= bound)
            && self.divides_period == params.period().is_multiple_of(self.t)
    }

    pub fn sup_disp(&self) -> Rational {
        self.disp
            .iter()
            .map(|d| d.abs())
            .max()
            .expect("d >= 1")
    }
}

/// First repeated mini-cell along `F(x), F(x + y), F(x + 2y), ...`.
///
/// There are `(C k)^d` mini-cells, so scanning `a = 0..=(C k)^d` must repeat;
/// the pair with the smallest `b` is returned.
pub fn pigeonhole_return(x: i64, y: i64, params: &ChessboardParams) -> Result<ReturnCertificate> {
    if y == 0 {
        return Err(Error::param("y", "difference must be nonzero"));
    }
    let period = params.period_big();
    let step = f_map(y, params);
    let mut point = f_map(x, params);
    let mut seen: HashMap<MiniCellIndex, u64> = HashMap::new();
    for b in 0..=params.pigeonhole_bound() {
        let mini = mini_cell_of(&point, params);
        if let Some(&a) = seen.get(&mini) {
            let t = b - a;
            let ty = f_map(BigInt::from(y) * t, params);
            let disp = ty
                .coords()
                .iter()
                .map(|c| lift_nearest_zero(c, &period))
                .collect();
            return Ok(ReturnCertificate {
                x,
                y,
                t,
                a,
                b,
                mini,
                disp,
                divides_period: params.period().is_multiple_of(t),
            });
        }
        seen.insert(mini, b);
        point = point.add(&step, &period);
    }
    unreachable!("more points than mini-cells, pigeonhole must repeat")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaCheck {
    pub y: i64,
    pub t: u64,
    /// Sup-norm distance from `t * F(y)` (with `F(y)` in `[0, N1)^d`) to `N1 ℤ^d`.
    pub eta: Rational,
    pub in_s: bool,
    /// `y` in the restricted set and `t | N1`.
    pub applicable: bool,
    /// `!applicable || eta >= delta`.
    pub holds: bool,
}

/// The divisibility lemma on one instance.
///
/// If `t | N1` then `(N1/t) ℤ^d ⊆ ℤ^d`, so `t F(y)` within `eta` of `N1 ℤ^d`
/// puts `F(y)` within `eta / t` of an integer point; since some coordinate of
/// `F(y)` is more than `delta` from ℤ, `eta > delta`.
pub fn eta_check(y: i64, t: u64, params: &ChessboardParams) -> Result<EtaCheck> {
    if t == 0 {
        return Err(Error::param("t", "must be at least 1"));
    }
    let period = params.period_big();
    let lifted = f_map(y, params);
    let eta = lifted
        .coords()
        .iter()
        .map(|c| dist_to_multiple(&(c * int(t)), &period))
        .max()
        .expect("d >= 1");
    let in_s = bohr_gap(y, params.alphas()) > *params.delta().value();
    let applicable = in_s && params.period().is_multiple_of(t);
    let holds = !applicable || eta >= *params.delta().value();
    Ok(EtaCheck {
        y,
        t,
        eta,
        in_s,
        applicable,
        holds,
    })
}
