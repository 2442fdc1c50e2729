//! Lines traced by a progression's torus image through the chessboard, their
//! quantization into orbit classes, and the census behind the union bound.
//!
//! Positions along a line are measured in parameter units: the point at
//! parameter `s` is `base + s * step`, so a chord of length 1 is one step of
//! the progression. Everything stays rational.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::chessboard::{f_map, CellIndex, Chessboard, ChessboardParams, TorusPoint};
use crate::coloring::Color;
use crate::error::{Error, Result};
use crate::rational::{floor_to_int, format_rational, int, Rational};
use crate::verifier::ReturnCertificate;

/// The segment `base + s * step`, `s` in `[0, n_steps]`, on the N1-torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracedLine {
    pub base: TorusPoint,
    pub step: Vec<Rational>,
    pub n_steps: u64,
}

impl TracedLine {
    /// Line through `F(x)` with step `F(t y)` taken from a return certificate.
    pub fn from_certificate(
        cert: &ReturnCertificate,
        params: &ChessboardParams,
        n_steps: u64,
    ) -> TracedLine {
        TracedLine {
            base: f_map(cert.x, params),
            step: cert.disp.clone(),
            n_steps,
        }
    }

    /// Largest `|step_i|`.
    pub fn dominant_step(&self) -> Rational {
        self.step
            .iter()
            .map(|s| s.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// One maximal piece of a trace inside a single cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSegment {
    pub cell: CellIndex,
    /// Parameter at which the line enters the cell.
    pub enter: Rational,
    pub chord: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellTrace {
    pub segments: Vec<TraceSegment>,
    pub dominant_step: Rational,
    pub cell_side: u64,
    pub cells_per_axis: u64,
}

impl CellTrace {
    /// Number of distinct cells the line passes through with positive chord.
    pub fn distinct_cells(&self) -> usize {
        let mut flat: Vec<usize> = self
            .segments
            .iter()
            .map(|s| s.cell.row_major(self.cells_per_axis))
            .collect();
        flat.sort_unstable();
        flat.dedup();
        flat.len()
    }

    pub fn total_chord(&self) -> Rational {
        self.segments.iter().map(|s| &s.chord).sum()
    }
}

/// Incremental grid walk on the lifted line; cell indices are wrapped mod k
/// on output. Crossing several boundaries at the same parameter moves
/// diagonally, so no zero-length chord is ever emitted.
fn traverse<T>(
    base: &[Ratio<T>],
    step: &[Ratio<T>],
    n_steps: T,
    side: T,
    k: T,
) -> Vec<(Vec<T>, Ratio<T>, Ratio<T>)>
where
    T: Integer + Signed + Clone,
{
    let end = Ratio::from_integer(n_steps);
    let side_r = Ratio::from_integer(side.clone());
    let mut cell: Vec<T> = base
        .iter()
        .map(|b| (b / &side_r).floor().to_integer())
        .collect();
    let inc: Vec<Option<Ratio<T>>> = step
        .iter()
        .map(|v| (!v.is_zero()).then(|| &side_r / v.abs()))
        .collect();
    let mut next: Vec<Option<Ratio<T>>> = base
        .iter()
        .zip(step)
        .zip(&cell)
        .map(|((b, v), c)| {
            if v.is_zero() {
                None
            } else if v.is_positive() {
                Some((Ratio::from_integer((c.clone() + T::one()) * side.clone()) - b) / v)
            } else {
                Some((Ratio::from_integer(c.clone() * side.clone()) - b) / v)
            }
        })
        .collect();

    let mut out = Vec::new();
    let mut s = Ratio::zero();
    loop {
        let s_next = next
            .iter()
            .flatten()
            .fold(end.clone(), |m, t| if *t < m { t.clone() } else { m });
        if s_next > s {
            let wrapped = cell.iter().map(|c| c.mod_floor(&k)).collect();
            out.push((wrapped, s.clone(), &s_next - &s));
        }
        if s_next >= end {
            break;
        }
        for axis in 0..cell.len() {
            if next[axis].as_ref() == Some(&s_next) {
                if step[axis].is_positive() {
                    cell[axis] = cell[axis].clone() + T::one();
                } else {
                    cell[axis] = cell[axis].clone() - T::one();
                }
                let bump = inc[axis].clone().expect("axis with a crossing moves");
                next[axis] = next[axis].take().map(|t| t + bump);
            }
        }
        s = s_next;
    }
    out
}

/// Cells entered by the line, in order, with the exact chord of each visit.
pub fn trace_cells(line: &TracedLine, params: &ChessboardParams) -> Result<CellTrace> {
    if line.step.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateLine);
    }
    if line.step.len() != params.dim() || line.base.coords().len() != params.dim() {
        return Err(Error::param("step", "dimension does not match d"));
    }
    let walk = traverse(
        line.base.coords(),
        &line.step,
        BigInt::from(line.n_steps),
        BigInt::from(params.cell_side()),
        BigInt::from(params.cells_per_axis()),
    );
    let segments = walk
        .into_iter()
        .map(|(cell, enter, chord)| TraceSegment {
            cell: CellIndex(cell.iter().map(|c| c.to_u64().expect("wrapped")).collect()),
            enter,
            chord,
        })
        .collect();
    Ok(CellTrace {
        segments,
        dominant_step: line.dominant_step(),
        cell_side: params.cell_side(),
        cells_per_axis: params.cells_per_axis(),
    })
}

fn check_threshold(threshold: &Rational) -> Result<()> {
    if !threshold.is_positive() || *threshold > Rational::one() {
        return Err(Error::param(
            "threshold",
            format!("{} is outside (0, 1]", format_rational(threshold)),
        ));
    }
    Ok(())
}

/// Distinct cells met with a long chord: the projection onto the dominant
/// axis covers at least `threshold * N0`, i.e. the chord is at least
/// `threshold * N0 / |step_dominant|` in parameter units.
pub fn long_chord_cells(trace: &CellTrace, threshold: &Rational) -> Result<usize> {
    check_threshold(threshold)?;
    let min_chord = threshold * int(trace.cell_side) / &trace.dominant_step;
    let mut flat: Vec<usize> = trace
        .segments
        .iter()
        .filter(|s| s.chord >= min_chord)
        .map(|s| s.cell.row_major(trace.cells_per_axis))
        .collect();
    flat.sort_unstable();
    flat.dedup();
    Ok(flat.len())
}

/// Quantized direction and base point of a line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitKey {
    /// `floor(step_i * R * C / N0)` with `step_i` clamped to `[-N0/C, N0/C]`.
    pub qdir: Vec<i64>,
    /// `floor(base_i * R / N1)`.
    pub qint: Vec<i64>,
    pub resolution: u64,
}

impl OrbitKey {
    pub fn dir_label(&self) -> String {
        join_ints(&self.qdir)
    }
    pub fn int_label(&self) -> String {
        join_ints(&self.qint)
    }
}

fn join_ints(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn orbit_key(line: &TracedLine, resolution: u64, params: &ChessboardParams) -> Result<OrbitKey> {
    if resolution < 2 {
        return Err(Error::param("R", format!("{resolution} < 2")));
    }
    let limit = params.mini_cell_side();
    let dir_scale = int(resolution) * int(params.subdivision()) / int(params.cell_side());
    let int_scale = Rational::new(resolution.into(), params.period().into());
    let floor_i64 = |x: Rational| floor_to_int(&x).to_i64().expect("quantized index fits i64");
    let qdir = line
        .step
        .iter()
        .map(|s| {
            let clamped = s.clone().max(-limit.clone()).min(limit.clone());
            floor_i64(clamped * &dir_scale)
        })
        .collect();
    let qint = line
        .base
        .coords()
        .iter()
        .map(|b| floor_i64(b * &int_scale))
        .collect();
    Ok(OrbitKey {
        qdir,
        qint,
        resolution,
    })
}

/// `n_orbits * 2^(-min_cells)`.
pub fn union_bound(n_orbits: &BigInt, min_cells: usize) -> Rational {
    Rational::new(n_orbits.clone(), BigInt::one() << min_cells)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMode {
    /// Trace every key.
    Exhaustive,
    /// Trace one key per symmetry class of the board (axis permutations,
    /// reflections, translations by whole cells) and weight by class size.
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub key: OrbitKey,
    /// Number of keys this row stands for.
    pub multiplicity: u64,
    pub cells_met: usize,
    pub long_chord_cells: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    pub resolution: u64,
    pub n_steps: u64,
    pub threshold: Rational,
    pub n_orbits: BigInt,
    pub min_cells: usize,
    pub union_bound: Rational,
    pub rows: Vec<CensusRow>,
}

impl OrbitCensus {
    pub fn csv(&self) -> String {
        let mut out = String::from("qdir,qint,multiplicity,cells_met,long_chord_cells\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.key.dir_label(),
                r.key.int_label(),
                r.multiplicity,
                r.cells_met,
                r.long_chord_cells
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "R={} n_steps={} threshold={} n_orbits={} min_cells={} union_bound={}",
            self.resolution,
            self.n_steps,
            format_rational(&self.threshold),
            self.n_orbits,
            self.min_cells,
            format_rational(&self.union_bound)
        )
    }
}

/// Census of orbit classes at resolution `R`.
///
/// Each key is represented by the line through the center of its box,
/// normalized so that one axis carries the full step `N0/C` (a line is fixed
/// by its direction up to speed) and starts on that axis' zero hyperplane;
/// the remaining axes carry a quantized slope in `[-R, R)` and a quantized
/// intercept in `[0, R)`. That gives `d (2R)^(d-1) R^(d-1)` keys.
pub fn orbit_census(
    params: &ChessboardParams,
    resolution: u64,
    n_steps: u64,
    threshold: &Rational,
    mode: CensusMode,
) -> Result<OrbitCensus> {
    if resolution < 2 {
        return Err(Error::param("R", format!("{resolution} < 2")));
    }
    check_threshold(threshold)?;
    let d = params.dim();
    let r = resolution as i64;
    let k = params.cells_per_axis() as i64;
    let others = d - 1;

    // Per free axis: slope range, intercept range, and the weight of each pick.
    let (dir_lo, int_hi, axis_weight, axes): (i64, i64, u64, Vec<usize>) = match mode {
        CensusMode::Exhaustive => (-r, r, 1, (0..d).collect()),
        CensusMode::Reduced => {
            let int_hi = if r % k == 0 { r / k } else { r };
            let weight = 2 * (r / int_hi) as u64;
            (0, int_hi, weight, vec![0])
        }
    };
    let axis_multiplicity = if mode == CensusMode::Reduced { d as u64 } else { 1 };
    let dir_count = (r - dir_lo) as u64;
    let per_axis = (dir_count * int_hi as u64).pow(others as u32);

    let side = params.cell_side() as i128;
    let sub = params.subdivision() as i128;
    let period = params.period() as i128;
    let dom_step = Ratio::new(side, sub);
    let min_chord = Ratio::new(to_i128(threshold.numer()), to_i128(threshold.denom()))
        * Ratio::from_integer(side)
        / dom_step;
    let r128 = r as i128;

    let jobs: Vec<(usize, u64)> = axes
        .iter()
        .flat_map(|&axis| (0..per_axis).map(move |j| (axis, j)))
        .collect();
    let mut rows: Vec<CensusRow> = jobs
        .into_par_iter()
        .map(|(axis, mut code)| {
            let mut qdir = vec![r; d];
            let mut qint = vec![0i64; d];
            let mut step = vec![dom_step; d];
            let mut base = vec![Ratio::from_integer(0i128); d];
            for j in (0..d).filter(|&j| j != axis) {
                let qi = (code % int_hi as u64) as i64;
                code /= int_hi as u64;
                let qd = dir_lo + (code % dir_count) as i64;
                code /= dir_count;
                qdir[j] = qd;
                qint[j] = qi;
                step[j] = Ratio::new((2 * qd as i128 + 1) * side, 2 * sub * r128);
                base[j] = Ratio::new((2 * qi as i128 + 1) * period, 2 * r128);
            }
            let walk = traverse(&base, &step, n_steps as i128, side, k as i128);
            let flat = |cell: &[i128]| {
                cell.iter()
                    .fold(0usize, |acc, &c| acc * k as usize + c as usize)
            };
            let mut met: Vec<usize> = walk.iter().map(|(c, _, _)| flat(c)).collect();
            met.sort_unstable();
            met.dedup();
            let mut long: Vec<usize> = walk
                .iter()
                .filter(|(_, _, chord)| *chord >= min_chord)
                .map(|(c, _, _)| flat(c))
                .collect();
            long.sort_unstable();
            long.dedup();
            let multiplicity = axis_multiplicity * axis_weight.pow(others as u32);
            CensusRow {
                key: OrbitKey {
                    qdir,
                    qint,
                    resolution,
                },
                multiplicity,
                cells_met: met.len(),
                long_chord_cells: long.len(),
            }
        })
        .collect();
    rows.sort_by(|a, b| a.key.cmp(&b.key));

    let n_orbits: BigInt = rows.iter().map(|r| BigInt::from(r.multiplicity)).sum();
    let min_cells = rows
        .iter()
        .map(|r| r.long_chord_cells)
        .min()
        .expect("at least one key");
    Ok(OrbitCensus {
        resolution,
        n_steps,
        threshold: threshold.clone(),
        union_bound: union_bound(&n_orbits, min_cells),
        n_orbits,
        min_cells,
        rows,
    })
}

fn to_i128(n: &BigInt) -> i128 {
    n.to_i128().expect("threshold fits i128")
}

fn to_f64(x: &Rational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// SVG of a two-dimensional board with the traced line drawn on top and the
/// visited cells outlined. Floating point is used only for drawing.
pub fn render_trace_svg(board: &Chessboard, line: &TracedLine, trace: &CellTrace) -> Result<String> {
    let params = board.params();
    if params.dim() != 2 {
        return Err(Error::param("d", "the trace figure needs d = 2"));
    }
    let k = params.cells_per_axis() as usize;
    let px = (640 / k).max(4);
    let size = px * k;
    let scale = px as f64 / params.cell_side() as f64;
    let n1 = params.period() as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"##
    );
    for (flat, color) in board.colors().iter().enumerate() {
        let cell = CellIndex::from_row_major(flat, params.cells_per_axis(), 2);
        let (cx, cy) = (cell.0[0] as usize, cell.0[1] as usize);
        let fill = match color {
            Color::Red => "#f4a6a6",
            Color::Blue => "#a6b8f4",
        };
        let _ = writeln!(
            svg,
            r##"<rect x="{}" y="{}" width="{px}" height="{px}" fill="{fill}"/>"##,
            cx * px,
            size - (cy + 1) * px
        );
    }
    let mut visited: Vec<usize> = trace.segments.iter().map(|s| s.cell.row_major(params.cells_per_axis())).collect();
    visited.sort_unstable();
    visited.dedup();
    for flat in visited {
        let cell = CellIndex::from_row_major(flat, params.cells_per_axis(), 2);
        let _ = writeln!(
            svg,
            r##"<rect x="{}" y="{}" width="{px}" height="{px}" fill="#000000" fill-opacity="0.18" stroke="#333333" stroke-width="1"/>"##,
            cell.0[0] as usize * px,
            size - (cell.0[1] as usize + 1) * px
        );
    }
    let _ = writeln!(
        svg,
        r##"<rect x="0" y="0" width="{size}" height="{size}" fill="none" stroke="#000000" stroke-width="2"/>"##
    );
    let base: Vec<f64> = line.base.coords().iter().map(to_f64).collect();
    let step: Vec<f64> = line.step.iter().map(to_f64).collect();
    let cell_origin = |cell: &CellIndex, axis: usize| (cell.0[axis] * params.cell_side()) as f64;
    for seg in &trace.segments {
        let s0 = to_f64(&seg.enter);
        let s1 = s0 + to_f64(&seg.chord);
        let mid = 0.5 * (s0 + s1);
        // Shift the lifted segment so its midpoint lands inside its cell.
        let shift: Vec<f64> = (0..2)
            .map(|a| {
                let lifted = base[a] + mid * step[a];
                let wrapped = lifted.rem_euclid(n1);
                let wrapped = if wrapped < cell_origin(&seg.cell, a) { wrapped + n1 } else { wrapped };
                wrapped - lifted
            })
            .collect();
        let at = |s: f64, a: usize| base[a] + s * step[a] + shift[a];
        let _ = writeln!(
            svg,
            r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#000000" stroke-width="1.5"/>"##,
            at(s0, 0) * scale,
            size as f64 - at(s0, 1) * scale,
            at(s1, 0) * scale,
            size as f64 - at(s1, 1) * scale
        );
    }
    for j in 0..=line.n_steps {
        let pt: Vec<f64> = (0..2)
            .map(|a| (base[a] + j as f64 * step[a]).rem_euclid(n1))
            .collect();
        let _ = writeln!(
            svg,
            r##"<circle cx="{:.3}" cy="{:.3}" r="2.5" fill="#000000"/>"##,
            pt[0] * scale,
            size as f64 - pt[1] * scale
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
