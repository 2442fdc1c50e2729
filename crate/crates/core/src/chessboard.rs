//! The chessboard construction: the torus map, the cell and mini-cell grids,
//! the seeded random coloring of the cells, and its pullback to ℤ.
//!
//! Cells are half-open boxes `[j*N0, (j+1)*N0)` per axis; a point on a
//! boundary belongs to the higher-indexed cell.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};

use crate::coloring::{Color, Coloring};
use crate::diophantine::{AlphaVector, BohrThreshold};
use crate::error::{Error, Result};
use crate::rational::{floor_to_int, format_rational, int, reduce_mod, Rational};

/// Boards larger than this are refused; they would not fit a desk anyway.
pub const MAX_CELLS: u64 = 1 << 28;

/// Inputs to [`build_params`].
#[derive(Clone, Debug)]
pub struct ParamRequest {
    pub dim: usize,
    pub alphas: AlphaVector,
    pub delta: BohrThreshold,
    /// Requested N0; rounded up to a multiple of `lcm(1..=lcm_bound)`.
    pub cell_side: u64,
    /// C, the number of mini-cells per cell side.
    pub subdivision: u64,
    /// k, the number of cells per torus side.
    pub cells_per_axis: u64,
    /// N2, the progression length / scan horizon.
    pub horizon: u64,
    pub seed: u64,
    pub lcm_bound: u64,
}

/// Which small integers divide the torus side N1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub lcm_bound: u64,
    /// `lcm(1..=lcm_bound)`, which divides N0 and hence N1.
    pub lcm: u64,
    /// `C * k`.
    pub linear_bound: u64,
    /// `(C * k)^d`, saturating; the largest return time pigeonhole can produce.
    pub pigeonhole_bound: u64,
    /// Every `t` in `[1, pigeonhole_bound]` with `t | N1`, ascending.
    pub dividing: Vec<u64>,
    /// Every `t` in `[1, C * k]` with `t ∤ N1`.
    pub missing_up_to_linear: Vec<u64>,
    pub covers_linear_bound: bool,
    pub covers_pigeonhole_bound: bool,
    /// Whether `N0 > k > C > max(d, 1/delta)` holds. Desk-scale runs rarely satisfy it.
    pub scale_ordered: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChessboardParams {
    alphas: AlphaVector,
    delta: BohrThreshold,
    requested_cell_side: u64,
    cell_side: u64,
    subdivision: u64,
    cells_per_axis: u64,
    period: u64,
    horizon: u64,
    seed: u64,
    lcm_bound: u64,
    divisibility: DivisibilityReport,
}

impl ChessboardParams {
    pub fn dim(&self) -> usize {
        self.alphas.dim()
    }
    pub fn alphas(&self) -> &AlphaVector {
        &self.alphas
    }
    pub fn delta(&self) -> &BohrThreshold {
        &self.delta
    }
    pub fn requested_cell_side(&self) -> u64 {
        self.requested_cell_side
    }
    /// N0.
    pub fn cell_side(&self) -> u64 {
        self.cell_side
    }
    /// C.
    pub fn subdivision(&self) -> u64 {
        self.subdivision
    }
    /// k.
    pub fn cells_per_axis(&self) -> u64 {
        self.cells_per_axis
    }
    /// N1 = k * N0.
    pub fn period(&self) -> u64 {
        self.period
    }
    /// N2.
    pub fn horizon(&self) -> u64 {
        self.horizon
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn lcm_bound(&self) -> u64 {
        self.lcm_bound
    }
    pub fn divisibility(&self) -> &DivisibilityReport {
        &self.divisibility
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ChessboardParams {
            seed,
            ..self.clone()
        }
    }

    pub fn n_cells(&self) -> usize {
        (self.cells_per_axis as usize).pow(self.dim() as u32)
    }

    pub fn pigeonhole_bound(&self) -> u64 {
        self.divisibility.pigeonhole_bound
    }

    pub fn period_big(&self) -> BigInt {
        BigInt::from(self.period)
    }

    /// Side of a mini-cell, N0 / C.
    pub fn mini_cell_side(&self) -> Rational {
        Rational::new(self.cell_side.into(), self.subdivision.into())
    }

    /// Human-readable `key value` dump, one per line.
    pub fn describe(&self) -> String {
        let r = &self.divisibility;
        let list = |v: &[u64]| {
            v.iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "d {}\nalphas {}\nlabel {}\napprox_note {}\ndelta {}\nN0_requested {}\nN0 {}\nC {}\nk {}\nN1 {}\nN2 {}\nseed {}\n\
             lcm_bound {}\nlcm {}\nCk {}\nCk_pow_d {}\ndividing {}\nmissing_up_to_Ck {}\n\
             covers_Ck {}\ncovers_Ck_pow_d {}\nscale_ordered {}\n",
            self.dim(),
            self.alphas,
            self.alphas.label,
            self.alphas.approx_note,
            format_rational(self.delta.value()),
            self.requested_cell_side,
            self.cell_side,
            self.subdivision,
            self.cells_per_axis,
            self.period,
            self.horizon,
            self.seed,
            r.lcm_bound,
            r.lcm,
            r.linear_bound,
            r.pigeonhole_bound,
            list(&r.dividing),
            list(&r.missing_up_to_linear),
            r.covers_linear_bound,
            r.covers_pigeonhole_bound,
            r.scale_ordered,
        )
    }
}

fn lcm_up_to(bound: u64) -> Option<u64> {
    (1..=bound).try_fold(1u64, |acc, t| acc.checked_mul(t / acc.gcd(&t)))
}

/// Divisors of `n` that are at most `bound`, ascending.
fn divisors_up_to(n: u64, bound: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i <= bound && i.saturating_mul(i) <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            let j = n / i;
            if j != i && j <= bound {
                large.push(j);
            }
        }
        i += 1;
    }
    // Cofactors of divisors below `bound` can still be <= bound when bound < sqrt(n);
    // they were pushed into `large` above, so a sort merges both halves.
    small.extend(large);
    small.sort_unstable();
    small.dedup();
    small
}

/// Assembles and validates the construction parameters.
///
/// N0 is first rounded up to the least multiple of `lcm(1..=lcm_bound)` that is
/// at least the requested value, so that lcm divides N1 = k * N0.
pub fn build_params(req: ParamRequest) -> Result<ChessboardParams> {
    let ParamRequest {
        dim,
        alphas,
        delta,
        cell_side,
        subdivision,
        cells_per_axis,
        horizon,
        seed,
        lcm_bound,
    } = req;
    if dim == 0 || dim != alphas.dim() {
        return Err(Error::param(
            "d",
            format!("d = {dim} but {} frequencies were given", alphas.dim()),
        ));
    }
    if lcm_bound < 1 {
        return Err(Error::param("lcm_bound", "must be at least 1"));
    }
    if cell_side < 1 {
        return Err(Error::param("N0", "must be at least 1"));
    }
    if subdivision < 2 {
        return Err(Error::param("C", format!("{subdivision} < 2")));
    }
    if cells_per_axis < 2 {
        return Err(Error::param("k", format!("{cells_per_axis} < 2")));
    }
    let lcm = lcm_up_to(lcm_bound)
        .ok_or_else(|| Error::param("lcm_bound", "lcm(1..=lcm_bound) overflows u64"))?;
    let scaled_side = cell_side
        .div_ceil(lcm)
        .checked_mul(lcm)
        .ok_or_else(|| Error::param("N0", "rounded cell side overflows u64"))?;
    let period = cells_per_axis
        .checked_mul(scaled_side)
        .ok_or_else(|| Error::param("k", "k * N0 overflows u64"))?;
    if horizon < period {
        return Err(Error::param("N2", format!("N2 = {horizon} < N1 = {period}")));
    }
    match cells_per_axis.checked_pow(dim as u32) {
        Some(n) if n <= MAX_CELLS => {}
        _ => {
            return Err(Error::param(
                "k",
                format!("k^d exceeds the {MAX_CELLS} cell limit"),
            ))
        }
    }

    let linear_bound = subdivision.saturating_mul(cells_per_axis);
    let pigeonhole_bound = linear_bound
        .checked_pow(dim as u32)
        .unwrap_or(u64::MAX);
    let dividing = divisors_up_to(period, pigeonhole_bound);
    let missing_up_to_linear: Vec<u64> = (1..=linear_bound).filter(|t| period % t != 0).collect();
    let covers_pigeonhole_bound = pigeonhole_bound <= period
        && (1..=pigeonhole_bound.min(1 << 20)).all(|t| period % t == 0);
    let inv_delta = delta.value().recip();
    let scale_ordered = scaled_side > cells_per_axis
        && cells_per_axis > subdivision
        && int(subdivision) > inv_delta
        && subdivision > dim as u64;
    let divisibility = DivisibilityReport {
        lcm_bound,
        lcm,
        linear_bound,
        pigeonhole_bound,
        dividing,
        covers_linear_bound: missing_up_to_linear.is_empty(),
        missing_up_to_linear,
        covers_pigeonhole_bound,
        scale_ordered,
    };
    Ok(ChessboardParams {
        alphas,
        delta,
        requested_cell_side: cell_side,
        cell_side: scaled_side,
        subdivision,
        cells_per_axis,
        period,
        horizon,
        seed,
        lcm_bound,
        divisibility,
    })
}

/// A point of the torus `(ℝ / N1 ℤ)^d`, every coordinate in `[0, N1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<Rational>,
}

impl TorusPoint {
    /// Reduces each coordinate into `[0, period)`.
    pub fn reduced(coords: Vec<Rational>, period: &BigInt) -> Self {
        TorusPoint {
            coords: coords.iter().map(|c| reduce_mod(c, period)).collect(),
        }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Componentwise sum modulo `period`.
    pub fn add(&self, other: &TorusPoint, period: &BigInt) -> TorusPoint {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let s = a + b;
                if s >= int(period.clone()) {
                    s - int(period.clone())
                } else {
                    s
                }
            })
            .collect();
        TorusPoint { coords }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex(pub Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MiniCellIndex(pub Vec<u64>);

impl CellIndex {
    /// Position in row-major order, first axis most significant.
    pub fn row_major(&self, cells_per_axis: u64) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &i| acc * cells_per_axis as usize + i as usize)
    }

    pub fn from_row_major(mut flat: usize, cells_per_axis: u64, dim: usize) -> CellIndex {
        let k = cells_per_axis as usize;
        let mut idx = vec![0u64; dim];
        for slot in idx.iter_mut().rev() {
            *slot = (flat % k) as u64;
            flat /= k;
        }
        CellIndex(idx)
    }
}

impl MiniCellIndex {
    pub fn enclosing_cell(&self, subdivision: u64) -> CellIndex {
        CellIndex(self.0.iter().map(|m| m / subdivision).collect())
    }
}

/// `x -> (alpha_1 x, ..., alpha_d x) mod N1`.
pub fn f_map(x: impl Into<BigInt>, params: &ChessboardParams) -> TorusPoint {
    let x = int(x.into());
    TorusPoint::reduced(
        params.alphas.alphas().iter().map(|a| a * &x).collect(),
        &params.period_big(),
    )
}

pub fn cell_of(p: &TorusPoint, params: &ChessboardParams) -> CellIndex {
    let side = int(params.cell_side);
    CellIndex(
        p.coords
            .iter()
            .map(|c| floor_to_int(&(c / &side)).to_u64().expect("reduced point"))
            .collect(),
    )
}

pub fn mini_cell_of(p: &TorusPoint, params: &ChessboardParams) -> MiniCellIndex {
    let side = params.mini_cell_side();
    MiniCellIndex(
        p.coords
            .iter()
            .map(|c| floor_to_int(&(c / &side)).to_u64().expect("reduced point"))
            .collect(),
    )
}

/// The k^d cells colored red or blue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chessboard {
    params: ChessboardParams,
    colors: Vec<Color>,
    board_hash: u64,
}

/// Colors every cell independently and uniformly.
///
/// Generator: `ChaCha8Rng::seed_from_u64(seed)`; cells are consumed in
/// row-major order, one `next_u32()` call each, and the low bit picks the
/// color (0 = Red, 1 = Blue).
pub fn random_chessboard(params: &ChessboardParams) -> Chessboard {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let colors = (0..params.n_cells())
        .map(|_| Color::from_bit(rng.next_u32() & 1 == 1))
        .collect();
    Chessboard::from_colors(params.clone(), colors).expect("length matches k^d")
}

impl Chessboard {
    /// A board with explicitly chosen cell colors (row-major).
    pub fn from_colors(params: ChessboardParams, colors: Vec<Color>) -> Result<Chessboard> {
        if colors.len() != params.n_cells() {
            return Err(Error::param(
                "colors",
                format!("expected {} cells, got {}", params.n_cells(), colors.len()),
            ));
        }
        let board_hash = hash_colors(&colors);
        Ok(Chessboard {
            params,
            colors,
            board_hash,
        })
    }

    pub fn params(&self) -> &ChessboardParams {
        &self.params
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn board_hash(&self) -> u64 {
        self.board_hash
    }

    pub fn board_hash_hex(&self) -> String {
        format!("{:016x}", self.board_hash)
    }

    pub fn color_at(&self, cell: &CellIndex) -> Color {
        self.colors[cell.row_major(self.params.cells_per_axis)]
    }

    pub fn red_fraction(&self) -> Rational {
        let reds = self.colors.iter().filter(|&&c| c == Color::Red).count();
        Rational::new(reds.into(), self.colors.len().into())
    }

    /// Header `d k N0 C N1 seed`, then the k^d cell symbols on one line.
    pub fn export(&self) -> String {
        let p = &self.params;
        let body: String = self.colors.iter().map(|c| c.symbol()).collect();
        format!(
            "{} {} {} {} {} {}\n{}\n",
            p.dim(),
            p.cells_per_axis,
            p.cell_side,
            p.subdivision,
            p.period,
            p.seed,
            body
        )
    }

    /// Integer route for [`color_of_integer`].
    pub fn pullback(&self) -> Result<PullbackColoring<'_>> {
        PullbackColoring::new(self)
    }
}

/// First 8 bytes (big-endian) of SHA-256 over the color discriminants.
fn hash_colors(colors: &[Color]) -> u64 {
    let bytes: Vec<u8> = colors.iter().map(|&c| c as u8).collect();
    let digest = Sha256::digest(&bytes);
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    u64::from_be_bytes(head)
}

/// The color of the cell containing `F(x)`.
pub fn color_of_integer(x: i64, board: &Chessboard) -> Color {
    board.color_at(&cell_of(&f_map(x, &board.params), &board.params))
}

/// Red iff the fractional part of `alpha x` lies in `[0, 1/2)`.
pub fn classic_half_coloring(x: i64, alpha: &Rational) -> Color {
    let v = alpha * int(x);
    let frac = &v - v.floor();
    Color::from_bit(frac * BigInt::from(2) >= int(1))
}

/// [`color_of_integer`] on machine integers.
///
/// With Q the common denominator of the frequencies, `Q * F(x)_i` is the
/// integer `(Q alpha_i x) mod (Q N1)` and its cell is that divided by `Q N0`.
pub struct PullbackColoring<'a> {
    board: &'a Chessboard,
    numers: Vec<i128>,
    modulus: i128,
    scaled_cell: i128,
    cells_per_axis: usize,
}

impl<'a> PullbackColoring<'a> {
    fn new(board: &'a Chessboard) -> Result<Self> {
        let params = &board.params;
        let q = params.alphas.common_denominator();
        let modulus = &q * params.period;
        let scaled_cell = &q * params.cell_side;
        let overflow = || Error::Overflow(format!("Q * N1 = {modulus} exceeds i64"));
        let modulus_i = modulus.to_i64().ok_or_else(overflow)? as i128;
        let numers = params
            .alphas
            .alphas()
            .iter()
            .map(|a| {
                let n = (a.numer() * (&q / a.denom())).mod_floor(&modulus);
                n.to_i128().expect("below modulus")
            })
            .collect();
        Ok(PullbackColoring {
            board,
            numers,
            modulus: modulus_i,
            scaled_cell: scaled_cell.to_i128().expect("below modulus"),
            cells_per_axis: params.cells_per_axis as usize,
        })
    }

    fn cell_color(&self, residues: impl Iterator<Item = i128>) -> Color {
        let flat = residues.fold(0usize, |acc, r| {
            acc * self.cells_per_axis + (r / self.scaled_cell) as usize
        });
        self.board.colors[flat]
    }

    /// Whether `F(y) = 0` on the torus, i.e. the pullback is y-periodic.
    pub fn fixes(&self, y: i64) -> bool {
        self.numers
            .iter()
            .all(|a| (a * y as i128).rem_euclid(self.modulus).is_zero())
    }
}

impl Coloring for PullbackColoring<'_> {
    fn color(&self, x: i64) -> Color {
        self.cell_color(
            self.numers
                .iter()
                .map(|a| (a * x as i128).rem_euclid(self.modulus)),
        )
    }

    fn progression(&self, start: i64, step: i64, len: usize, out: &mut Vec<Color>) {
        out.clear();
        let mut residues: Vec<i128> = self
            .numers
            .iter()
            .map(|a| (a * start as i128).rem_euclid(self.modulus))
            .collect();
        let incs: Vec<i128> = self
            .numers
            .iter()
            .map(|a| (a * step as i128).rem_euclid(self.modulus))
            .collect();
        for _ in 0..len {
            out.push(self.cell_color(residues.iter().copied()));
            for (r, inc) in residues.iter_mut().zip(&incs) {
                *r += inc;
                if *r >= self.modulus {
                    *r -= self.modulus;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn request(alphas: &str, n0: u64, c: u64, k: u64, n2: u64, lcm_bound: u64) -> ParamRequest {
        let alphas = AlphaVector::parse(alphas).unwrap();
        ParamRequest {
            dim: alphas.dim(),
            alphas,
            delta: BohrThreshold::new(ratio(1, 10)).unwrap(),
            cell_side: n0,
            subdivision: c,
            cells_per_axis: k,
            horizon: n2,
            seed: 0,
            lcm_bound,
        }
    }

    fn params(alphas: &str, n0: u64, c: u64, k: u64) -> ChessboardParams {
        build_params(request(alphas, n0, c, k, 1 << 20, 1)).unwrap()
    }

    #[test]
    fn build_params_examples() {
        let p = params("1/4", 4, 2, 4);
        assert_eq!(p.period(), 16);
        // (C k)^d = 8, so the report lists the divisors of 16 up to 8.
        assert_eq!(p.divisibility().dividing, vec![1, 2, 4, 8]);
        let p = build_params(request("1/4", 4, 4, 4, 100, 1)).unwrap();
        assert_eq!(p.divisibility().dividing, vec![1, 2, 4, 8, 16]);

        let p = build_params(request("1/4", 5, 2, 6, 1000, 4)).unwrap();
        assert_eq!(p.divisibility().lcm, 12);
        assert_eq!(p.cell_side(), 12);
        assert_eq!(p.requested_cell_side(), 5);
        assert_eq!(p.period(), 72);

        let err = build_params(request("1/4", 1, 2, 2, 1, 1)).unwrap_err();
        assert!(matches!(err, Error::Parameter { name: "N2", .. }));
        assert!(build_params(request("1/4", 1, 1, 2, 100, 1)).is_err());
        assert!(build_params(request("1/4", 1, 2, 1, 100, 1)).is_err());
        let mut bad_dim = request("1/4,1/3", 1, 2, 2, 100, 1);
        bad_dim.dim = 3;
        assert!(matches!(
            build_params(bad_dim),
            Err(Error::Parameter { name: "d", .. })
        ));
    }

    #[test]
    fn divisibility_flags() {
        let p = build_params(request("1/4", 12, 3, 24, 1 << 20, 1)).unwrap();
        let r = p.divisibility();
        assert_eq!(r.linear_bound, 72);
        assert_eq!(r.pigeonhole_bound, 72);
        assert!(!r.covers_linear_bound);
        assert!(r.missing_up_to_linear.contains(&5));
        assert!(r.dividing.iter().all(|t| 288 % t == 0));
        assert_eq!(r.dividing.len(), 15);
        let p = build_params(request("1/4", 1, 2, 4, 1 << 20, 8)).unwrap();
        assert!(p.divisibility().covers_linear_bound);
    }

    #[test]
    fn divisor_listing_matches_filter() {
        for n in [1u64, 2, 36, 97, 288, 1000, 5040] {
            for bound in [1u64, 5, 20, 100, 10_000] {
                let want: Vec<u64> = (1..=bound.min(n)).filter(|t| n % t == 0).collect();
                assert_eq!(divisors_up_to(n, bound), want, "n={n} bound={bound}");
            }
        }
    }

    #[test]
    fn f_map_examples() {
        let p = params("1/4", 1, 2, 4);
        assert_eq!(f_map(0, &p).coords(), &[int(0)]);
        assert_eq!(f_map(6, &p).coords(), &[ratio(3, 2)]);
        let p2 = params("1/4,1/3", 1, 2, 4);
        assert_eq!(f_map(3, &p2).coords(), &[ratio(3, 4), int(1)]);
        assert_eq!(f_map(0, &p2).coords(), &[int(0), int(0)]);
        assert_eq!(f_map(-1, &p).coords(), &[ratio(15, 4)]);
    }

    #[test]
    fn cell_and_mini_cell_examples() {
        let p = params("1/4", 1, 2, 4);
        assert_eq!(cell_of(&f_map(0, &p), &p), CellIndex(vec![0]));
        assert_eq!(cell_of(&f_map(6, &p), &p), CellIndex(vec![1]));
        assert_eq!(mini_cell_of(&f_map(3, &p), &p), MiniCellIndex(vec![1]));
        assert_eq!(mini_cell_of(&f_map(6, &p), &p), MiniCellIndex(vec![3]));
        let p2 = params("1/4,1/3", 1, 2, 4);
        let pt = f_map(3, &p2);
        assert_eq!(cell_of(&pt, &p2), CellIndex(vec![0, 1]));
        assert_eq!(mini_cell_of(&f_map(0, &p2), &p2), MiniCellIndex(vec![0, 0]));
        // Boundary point 1 belongs to the higher cell.
        assert_eq!(cell_of(&f_map(4, &p), &p), CellIndex(vec![1]));
    }

    #[test]
    fn board_size_and_determinism() {
        let p = params("1/4,1/3", 1, 2, 4);
        let a = random_chessboard(&p);
        let b = random_chessboard(&p);
        assert_eq!(a.colors().len(), 16);
        assert_eq!(a, b);
        assert_eq!(a.board_hash(), b.board_hash());
        let c = random_chessboard(&p.with_seed(1));
        assert_ne!(a.board_hash(), c.board_hash());
    }

    #[test]
    fn red_fraction_on_large_board() {
        let p = params("1/4,1/3", 1, 2, 64).with_seed(1);
        let board = random_chessboard(&p);
        let frac = board.red_fraction();
        assert!(frac >= ratio(2, 5) && frac <= ratio(3, 5), "{frac}");
        assert_eq!(frac, ratio(GOLDEN_RED_CELLS_K64_SEED1, 4096));
    }
    const GOLDEN_RED_CELLS_K64_SEED1: i64 = 1985;

    #[test]
    fn export_format() {
        let p = params("1/4", 1, 2, 4);
        let colors = vec![Color::Red, Color::Blue, Color::Red, Color::Blue];
        let board = Chessboard::from_colors(p, colors).unwrap();
        assert_eq!(board.export(), "1 4 1 2 4 0\nRBRB\n");
        assert_eq!(board.board_hash_hex().len(), 16);
    }

    #[test]
    fn color_of_integer_examples() {
        let p = params("1/4", 1, 2, 4);
        let colors = vec![Color::Red, Color::Blue, Color::Blue, Color::Red];
        let board = Chessboard::from_colors(p, colors).unwrap();
        assert_eq!(color_of_integer(0, &board), board.color_at(&CellIndex(vec![0])));
        assert_eq!(color_of_integer(6, &board), Color::Blue);
        assert_eq!(color_of_integer(6 + 16, &board), Color::Blue);
    }

    #[test]
    fn classic_examples() {
        assert_eq!(classic_half_coloring(0, &ratio(1, 3)), Color::Red);
        assert_eq!(classic_half_coloring(2, &ratio(1, 3)), Color::Blue);
        assert_eq!(classic_half_coloring(5, &ratio(1, 2)), Color::Blue);
        assert_eq!(classic_half_coloring(-1, &ratio(1, 3)), Color::Blue);
    }

    #[test]
    fn fast_half_interval_matches_exact() {
        for alpha in [ratio(1, 3), ratio(665857, 470832), ratio(-7, 10), ratio(1, 2)] {
            let fast = crate::coloring::HalfIntervalColoring::new(&alpha).unwrap();
            for x in -300..300 {
                assert_eq!(fast.color(x), classic_half_coloring(x, &alpha), "alpha={alpha} x={x}");
            }
        }
    }

    fn demo_board() -> Chessboard {
        let p = build_params(ParamRequest {
            seed: 7,
            ..request("577/408,1351/780", 12, 3, 6, 1 << 20, 1)
        })
        .unwrap();
        random_chessboard(&p)
    }

    #[test]
    fn pullback_route_matches_exact_route() {
        let board = demo_board();
        let fast = board.pullback().unwrap();
        for x in (-2000..2000).chain([1 << 40, -(1 << 35) + 3]) {
            assert_eq!(fast.color(x), color_of_integer(x, &board), "x={x}");
        }
        let mut walk = Vec::new();
        fast.progression(-77, 131, 50, &mut walk);
        for (j, c) in walk.iter().enumerate() {
            assert_eq!(*c, color_of_integer(-77 + 131 * j as i64, &board));
        }
    }

    proptest! {
        #[test]
        fn f_map_is_additive(x in -100_000i64..100_000, y in -100_000i64..100_000) {
            let p = params("577/408,-1351/780", 12, 3, 6);
            let sum = f_map(x, &p).add(&f_map(y, &p), &p.period_big());
            prop_assert_eq!(f_map(x + y, &p), sum);
        }

        #[test]
        fn mini_cells_refine_cells(x in -100_000i64..100_000) {
            let p = params("577/408,1351/780", 12, 3, 6);
            let pt = f_map(x, &p);
            prop_assert_eq!(mini_cell_of(&pt, &p).enclosing_cell(3), cell_of(&pt, &p));
        }

        #[test]
        fn pullback_is_periodic(x in -10_000i64..10_000, m in -3i64..3) {
            let board = demo_board();
            let q = board.params().alphas().common_denominator().to_i64().unwrap();
            let period = q * board.params().period() as i64;
            prop_assert_eq!(color_of_integer(x + m * period, &board), color_of_integer(x, &board));
        }

        #[test]
        fn color_factors_through_torus_point(x in -50_000i64..50_000) {
            // Two integers with the same torus image get the same color.
            let board = demo_board();
            let p = board.params();
            let y = x + 26520 * p.period() as i64;
            prop_assert_eq!(f_map(x, p), f_map(y, p));
            prop_assert_eq!(color_of_integer(x, &board), color_of_integer(y, &board));
        }
    }
}
