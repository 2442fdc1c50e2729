//! Combinatorial lines in `{0,1,2}^d` and why a fixed 2-coloring of the torus
//! `(ℝ/ℤ)^d` cannot work in high dimension: a monochromatic line in the grid
//! `{0, 1/3, 2/3}^d` is a 3-periodic, hence infinite, monochromatic
//! progression with difference coordinates in `{0, 1/3}`.

use std::fmt;

use crate::coloring::Color;
use crate::error::{Error, Result};
use crate::rational::{int, ratio, reduce_mod, Rational};

/// A point of `{0,1,2}^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HJPoint(pub Vec<u8>);

impl HJPoint {
    /// Position in lexicographic order, first coordinate most significant.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &c| acc * 3 + c as usize)
    }

    pub fn from_index(mut index: usize, d: usize) -> HJPoint {
        let mut coords = vec![0u8; d];
        for c in coords.iter_mut().rev() {
            *c = (index % 3) as u8;
            index /= 3;
        }
        HJPoint(coords)
    }
}

/// One template symbol. Variant order gives `0 < 1 < 2 < *`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Fixed(u8),
    Star,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HJLine {
    template: Vec<Slot>,
}

impl HJLine {
    pub fn new(template: Vec<Slot>) -> Result<HJLine> {
        if !template.contains(&Slot::Star) {
            return Err(Error::param("template", "a line needs at least one star"));
        }
        if template.iter().any(|s| matches!(s, Slot::Fixed(v) if *v > 2)) {
            return Err(Error::param("template", "fixed symbols must be 0, 1 or 2"));
        }
        Ok(HJLine { template })
    }

    pub fn template(&self) -> &[Slot] {
        &self.template
    }

    /// The point with every star replaced by `value`.
    pub fn point(&self, value: u8) -> HJPoint {
        HJPoint(
            self.template
                .iter()
                .map(|s| match *s {
                    Slot::Fixed(v) => v,
                    Slot::Star => value,
                })
                .collect(),
        )
    }

    pub fn points(&self) -> [HJPoint; 3] {
        [self.point(0), self.point(1), self.point(2)]
    }
}

impl fmt::Display for HJLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .template
            .iter()
            .map(|s| match s {
                Slot::Fixed(v) => v.to_string(),
                Slot::Star => "*".to_string(),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All `4^d - 3^d` lines, lexicographic over templates with `*` highest.
pub fn enumerate_lines(d: usize) -> Vec<HJLine> {
    let total = 4usize.pow(d as u32);
    (0..total)
        .filter_map(|mut code| {
            let mut template = vec![Slot::Star; d];
            for slot in template.iter_mut().rev() {
                *slot = match code % 4 {
                    3 => Slot::Star,
                    v => Slot::Fixed(v as u8),
                };
                code /= 4;
            }
            HJLine::new(template).ok()
        })
        .collect()
}

/// First line in enumeration order whose three points share a color.
pub fn find_mono_line<F>(d: usize, coloring: F) -> Option<HJLine>
where
    F: Fn(&HJPoint) -> Color,
{
    enumerate_lines(d).into_iter().find(|line| {
        let [a, b, c] = line.points();
        let first = coloring(&a);
        coloring(&b) == first && coloring(&c) == first
    })
}

/// [`find_mono_line`] for a coloring stored in lexicographic point order.
pub fn find_mono_line_in(colors: &[Color], d: usize) -> Option<HJLine> {
    assert_eq!(colors.len(), 3usize.pow(d as u32), "coloring must be total");
    find_mono_line(d, |p| colors[p.index()])
}

/// `3^d` symbols `R`/`B` in lexicographic point order.
pub fn format_coloring(colors: &[Color]) -> String {
    colors.iter().map(|c| c.symbol()).collect()
}

pub fn parse_coloring(text: &str) -> Result<Vec<Color>> {
    text.trim()
        .chars()
        .map(|c| Color::from_symbol(c).ok_or_else(|| Error::param("coloring", format!("bad symbol {c:?}"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A verified line-free coloring.
    Found(Vec<Color>),
    /// The search space was exhausted: no line-free coloring exists.
    Complete,
    /// Gave up after the node budget.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    /// Color assignments tried.
    pub nodes: u64,
}

impl SearchResult {
    /// `R`/`B` string, `NONE (complete)` or `NONE (budget)`.
    pub fn render(&self) -> String {
        match &self.outcome {
            SearchOutcome::Found(colors) => format_coloring(colors),
            SearchOutcome::Complete => "NONE (complete)".to_string(),
            SearchOutcome::BudgetExhausted => "NONE (budget)".to_string(),
        }
    }
}

/// Backtracking search for a 2-coloring of `{0,1,2}^d` with no monochromatic line.
///
/// Points are colored in lexicographic order. Every line's largest point is
/// the one with its stars set to 2, so a line can be checked as soon as that
/// point is colored. The first point is fixed to Red (swapping colors maps
/// line-free colorings to line-free colorings).
pub fn search_line_free(d: usize, node_budget: u64) -> SearchResult {
    let n = 3usize.pow(d as u32);
    let mut closing: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for line in enumerate_lines(d) {
        let [a, b, c] = line.points();
        closing[c.index()].push((a.index(), b.index()));
    }

    let mut colors = vec![Color::Red; n];
    // Next color to try at each depth: 0 = Red, 1 = Blue, 2 = exhausted.
    let mut choice = vec![0u8; n + 1];
    let mut depth = 0usize;
    let mut nodes = 0u64;
    loop {
        if depth == n {
            assert!(
                find_mono_line_in(&colors, d).is_none(),
                "search produced a coloring with a monochromatic line"
            );
            return SearchResult {
                outcome: SearchOutcome::Found(colors),
                nodes,
            };
        }
        let limit = if depth == 0 { 1 } else { 2 };
        if choice[depth] >= limit {
            choice[depth] = 0;
            if depth == 0 {
                return SearchResult {
                    outcome: SearchOutcome::Complete,
                    nodes,
                };
            }
            depth -= 1;
            continue;
        }
        if nodes >= node_budget {
            return SearchResult {
                outcome: SearchOutcome::BudgetExhausted,
                nodes,
            };
        }
        nodes += 1;
        let color = Color::from_bit(choice[depth] == 1);
        choice[depth] += 1;
        colors[depth] = color;
        let clash = closing[depth]
            .iter()
            .any(|&(a, b)| colors[a] == color && colors[b] == color);
        if !clash {
            depth += 1;
        }
    }
}

/// A progression `base + j * step` on `(ℝ/ℤ)^d` with `3 * step = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAPWitness {
    pub base: Vec<Rational>,
    pub step: Vec<Rational>,
    pub period: u32,
}

impl TorusAPWitness {
    /// `base + j * step`, reduced into `[0, 1)^d`.
    pub fn term(&self, j: i64) -> Vec<Rational> {
        let one = 1.into();
        self.base
            .iter()
            .zip(&self.step)
            .map(|(b, s)| reduce_mod(&(b + s * int(j)), &one))
            .collect()
    }
}

/// Stars move by 1/3, fixed symbols `v` sit at `v/3`.
pub fn lift_to_torus_ap(line: &HJLine) -> TorusAPWitness {
    let (base, step) = line
        .template
        .iter()
        .map(|s| match *s {
            Slot::Fixed(v) => (ratio(v as i64, 3), int(0)),
            Slot::Star => (int(0), ratio(1, 3)),
        })
        .unzip();
    TorusAPWitness {
        base,
        step,
        period: 3,
    }
}

/// Pulls a coloring of `{0,1,2}^d` back to the grid `{0, 1/3, 2/3}^d`.
pub fn grid_color(colors: &[Color], point: &[Rational]) -> Color {
    let idx = point.iter().fold(0usize, |acc, c| {
        let scaled = c * int(3);
        assert!(scaled.is_integer(), "point is off the 1/3 grid");
        acc * 3 + scaled.to_integer().try_into().unwrap_or(0usize)
    });
    colors[idx]
}
