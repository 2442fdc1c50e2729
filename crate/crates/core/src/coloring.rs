//! Two-colorings of the integers.

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Discriminants are fixed: they feed `board_hash`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Color {
    Red = 0,
    Blue = 1,
}

impl Color {
    pub fn symbol(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }

    pub fn from_symbol(c: char) -> Option<Color> {
        match c {
            'R' => Some(Color::Red),
            'B' => Some(Color::Blue),
            _ => None,
        }
    }

    pub fn from_bit(bit: bool) -> Color {
        if bit {
            Color::Blue
        } else {
            Color::Red
        }
    }
}

/// A total 2-coloring of ℤ (restricted to `i64`).
pub trait Coloring: Sync {
    fn color(&self, x: i64) -> Color;

    /// Colors of `start, start + step, ...` (`len` terms) into `out`.
    /// Implementations may override this with an incremental walk.
    fn progression(&self, start: i64, step: i64, len: usize, out: &mut Vec<Color>) {
        out.clear();
        out.extend((0..len as i64).map(|j| self.color(start + j * step)));
    }
}

/// Adapts a closure into a [`Coloring`].
pub struct FnColoring<F>(pub F);

impl<F: Fn(i64) -> Color + Sync> Coloring for FnColoring<F> {
    fn color(&self, x: i64) -> Color {
        (self.0)(x)
    }
}

/// Integer route for the half-interval coloring `x -> [frac(alpha x) < 1/2]`.
/// Must agree with [`crate::classic_half_coloring`] everywhere.
#[derive(Clone, Debug)]
pub struct HalfIntervalColoring {
    numer: i128,
    denom: i128,
}

impl HalfIntervalColoring {
    pub fn new(alpha: &Rational) -> Result<Self> {
        let denom = alpha
            .denom()
            .to_i64()
            .ok_or_else(|| Error::Overflow(format!("denominator of {alpha} exceeds i64")))?;
        let numer = alpha
            .numer()
            .mod_floor(alpha.denom())
            .to_i64()
            .expect("reduced numerator is below the denominator");
        Ok(HalfIntervalColoring {
            numer: numer as i128,
            denom: denom as i128,
        })
    }

    fn of_residue(&self, r: i128) -> Color {
        Color::from_bit(2 * r >= self.denom)
    }
}

impl Coloring for HalfIntervalColoring {
    fn color(&self, x: i64) -> Color {
        self.of_residue((self.numer * x as i128).rem_euclid(self.denom))
    }

    fn progression(&self, start: i64, step: i64, len: usize, out: &mut Vec<Color>) {
        out.clear();
        let mut r = (self.numer * start as i128).rem_euclid(self.denom);
        let inc = (self.numer * step as i128).rem_euclid(self.denom);
        for _ in 0..len {
            out.push(self.of_residue(r));
            r += inc;
            if r >= self.denom {
                r -= self.denom;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn symbols_round_trip() {
        for c in [Color::Red, Color::Blue] {
            assert_eq!(Color::from_symbol(c.symbol()), Some(c));
        }
        assert_eq!(Color::from_symbol('x'), None);
        assert_eq!(Color::Red as u8, 0);
        assert_eq!(Color::Blue as u8, 1);
    }

    #[test]
    fn half_interval_progression_matches_pointwise() {
        let h = HalfIntervalColoring::new(&ratio(-17, 12)).unwrap();
        let mut walk = Vec::new();
        h.progression(-40, 7, 30, &mut walk);
        let direct: Vec<Color> = (0..30).map(|j| h.color(-40 + 7 * j)).collect();
        assert_eq!(walk, direct);
        h.progression(5, -3, 20, &mut walk);
        let direct: Vec<Color> = (0..20).map(|j| h.color(5 - 3 * j)).collect();
        assert_eq!(walk, direct);
    }
}
