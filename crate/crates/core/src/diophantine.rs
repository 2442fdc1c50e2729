//! Circle distances and Bohr-recurrence quantities over rational frequencies.
//!
//! The frequencies are exact rationals standing in for irrationals (usually
//! continued-fraction convergents), so every gap below is exact. The
//! threshold is called `delta` throughout; `epsilon` is the same quantity.

use std::collections::BinaryHeap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Frequencies `alpha_1..alpha_d` plus provenance notes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaVector {
    alphas: Vec<Rational>,
    pub label: String,
    /// Which irrational each entry approximates and which convergent was used.
    pub approx_note: String,
}

impl AlphaVector {
    pub fn new(alphas: Vec<Rational>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::param("alphas", "need at least one frequency"));
        }
        Ok(AlphaVector {
            alphas,
            label: String::new(),
            approx_note: String::new(),
        })
    }

    pub fn with_notes(mut self, label: impl Into<String>, approx_note: impl Into<String>) -> Self {
        self.label = label.into();
        self.approx_note = approx_note.into();
        self
    }

    /// Comma-separated `p/q` list, e.g. `577/408,1351/780`.
    pub fn parse(text: &str) -> Result<Self> {
        let alphas = text
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphas)
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alphas
    }

    /// Least common denominator of all frequencies.
    pub fn common_denominator(&self) -> BigInt {
        self.alphas
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()))
    }

    /// Every frequency multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        AlphaVector {
            alphas: self.alphas.iter().map(|a| a * factor).collect(),
            label: self.label.clone(),
            approx_note: self.approx_note.clone(),
        }
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.alphas.iter().map(format_rational).collect();
        f.write_str(&parts.join(","))
    }
}

/// A threshold `delta` in `(0, 1/2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BohrThreshold(Rational);

impl BohrThreshold {
    pub fn new(delta: Rational) -> Result<Self> {
        if !delta.is_positive() || delta > Rational::new(1.into(), 2.into()) {
            return Err(Error::param(
                "delta",
                format!("{} is outside (0, 1/2]", format_rational(&delta)),
            ));
        }
        Ok(BohrThreshold(delta))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
pub fn torus_norm(x: &Rational) -> Rational {
    let frac = x - x.floor();
    let other = Rational::one() - &frac;
    frac.min(other)
}

/// `max_i ||s * alpha_i||`.
pub fn bohr_gap(s: i64, alphas: &AlphaVector) -> Rational {
    let s = Rational::from_integer(BigInt::from(s));
    alphas
        .alphas
        .iter()
        .map(|a| torus_norm(&(a * &s)))
        .max()
        .expect("AlphaVector is never empty")
}

/// Membership in the restricted difference set: some `||s * alpha_i|| > delta`.
/// The boundary `== delta` is excluded.
pub fn in_restricted_set(s: i64, alphas: &AlphaVector, delta: &BohrThreshold) -> bool {
    bohr_gap(s, alphas) > delta.0
}

/// First `n` convergents of the continued fraction `[a0; a1, a2, ...]`.
pub fn convergents(partial_quotients: &[i64], n: usize) -> Result<Vec<Rational>> {
    if n > partial_quotients.len() {
        return Err(Error::InsufficientPartialQuotients {
            needed: n,
            available: partial_quotients.len(),
        });
    }
    if let Some(bad) = partial_quotients.iter().skip(1).find(|&&a| a <= 0) {
        return Err(Error::param(
            "cf",
            format!("partial quotient {bad} after the first must be positive"),
        ));
    }
    // p_{-1} = 1, p_{-2} = 0; q_{-1} = 0, q_{-2} = 1.
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::with_capacity(n);
    for &a in &partial_quotients[..n] {
        let a = BigInt::from(a);
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Rational::new(p.clone(), q.clone()));
    }
    Ok(out)
}

/// The `count` values `s` in `[1, max_s]` with the smallest Bohr gap, ascending
/// by gap with ties going to the smaller `s`. Exhaustive.
pub fn near_return(alphas: &AlphaVector, max_s: u64, count: usize) -> Vec<(u64, Rational)> {
    let denom = alphas.common_denominator();
    let numers: Vec<BigInt> = alphas
        .alphas
        .iter()
        .map(|a| (a.numer() * (&denom / a.denom())).mod_floor(&denom))
        .collect();

    // Gap numerators over the common denominator; i128 when products fit.
    let fits = denom.to_i64().is_some() && max_s <= i64::MAX as u64;
    let best: Vec<(BigInt, u64)> = if fits {
        let q = denom.to_i128().unwrap();
        let a: Vec<i128> = numers.iter().map(|n| n.to_i128().unwrap()).collect();
        smallest_gaps(&a, &q, max_s, count)
            .into_iter()
            .map(|(g, s)| (BigInt::from(g), s))
            .collect()
    } else {
        smallest_gaps(&numers, &denom, max_s, count)
    };
    best.into_iter()
        .map(|(g, s)| (s, Rational::new(g, denom.clone())))
        .collect()
}

fn smallest_gaps<T>(numers: &[T], denom: &T, max_s: u64, count: usize) -> Vec<(T, u64)>
where
    T: Integer + Clone + From<u64>,
{
    if count == 0 {
        return Vec::new();
    }
    let mut heap: BinaryHeap<(T, u64)> = BinaryHeap::with_capacity(count + 1);
    let steps: Vec<T> = numers.to_vec();
    let mut residues: Vec<T> = numers.to_vec();
    for s in 1..=max_s {
        let gap = residues
            .iter()
            .map(|r| {
                let other = denom.clone() - r.clone();
                if *r < other {
                    r.clone()
                } else {
                    other
                }
            })
            .max()
            .expect("nonempty");
        if heap.len() < count {
            heap.push((gap, s));
        } else if let Some(top) = heap.peek() {
            if (&gap, s) < (&top.0, top.1) {
                heap.pop();
                heap.push((gap, s));
            }
        }
        for (r, st) in residues.iter_mut().zip(&steps) {
            let next = r.clone() + st.clone();
            *r = if next >= *denom { next - denom.clone() } else { next };
        }
    }
    let mut out: Vec<(T, u64)> = heap.into_vec();
    out.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn av(list: &[(i64, i64)]) -> AlphaVector {
        AlphaVector::new(list.iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap()
    }

    #[test]
    fn torus_norm_examples() {
        assert_eq!(torus_norm(&int(0)), int(0));
        assert_eq!(torus_norm(&ratio(7, 10)), ratio(3, 10));
        assert_eq!(torus_norm(&ratio(-1, 3)), ratio(1, 3));
        assert_eq!(torus_norm(&ratio(1, 2)), ratio(1, 2));
    }

    #[test]
    fn bohr_gap_examples() {
        assert_eq!(bohr_gap(2, &av(&[(1, 2)])), int(0));
        assert_eq!(bohr_gap(1, &av(&[(1, 2), (1, 3)])), ratio(1, 2));
        assert_eq!(bohr_gap(5, &av(&[(3, 7)])), ratio(1, 7));
    }

    #[test]
    fn restricted_set_examples() {
        let quarter = BohrThreshold::new(ratio(1, 4)).unwrap();
        assert!(in_restricted_set(1, &av(&[(1, 2)]), &quarter));
        assert!(!in_restricted_set(2, &av(&[(1, 2)]), &quarter));
        assert!(!in_restricted_set(3, &av(&[(2, 5)]), &quarter));
        // ||1/4|| == delta is on the boundary and excluded.
        assert!(!in_restricted_set(1, &av(&[(1, 4)]), &quarter));
    }

    #[test]
    fn threshold_range() {
        assert!(BohrThreshold::new(int(0)).is_err());
        assert!(BohrThreshold::new(ratio(3, 5)).is_err());
        assert!(BohrThreshold::new(ratio(1, 2)).is_ok());
    }

    // Direct evaluation of a finite continued fraction, back to front.
    fn evaluate_cf(quotients: &[i64]) -> Rational {
        let mut acc = int(*quotients.last().unwrap());
        for &a in quotients.iter().rev().skip(1) {
            acc = int(a) + acc.recip();
        }
        acc
    }

    #[test]
    fn convergents_match_direct_evaluation() {
        let cf = [1, 2, 2, 2, 2, 2];
        let got = convergents(&cf, 6).unwrap();
        let oracle: Vec<Rational> = (1..=6).map(|n| evaluate_cf(&cf[..n])).collect();
        assert_eq!(got, oracle);
        let expected = [
            int(1),
            ratio(3, 2),
            ratio(7, 5),
            ratio(17, 12),
            ratio(41, 29),
            ratio(99, 70),
        ];
        assert_eq!(got, expected);
        assert!(got.windows(2).all(|w| w[0].denom() < w[1].denom()));
    }

    #[test]
    fn convergents_small_cases() {
        assert_eq!(convergents(&[0, 3], 2).unwrap(), vec![int(0), ratio(1, 3)]);
        assert_eq!(convergents(&[2], 1).unwrap(), vec![int(2)]);
        assert_eq!(
            convergents(&[1, 2], 3),
            Err(Error::InsufficientPartialQuotients {
                needed: 3,
                available: 2
            })
        );
        assert!(convergents(&[1, 0, 2], 3).is_err());
    }

    fn near_return_oracle(alphas: &AlphaVector, max_s: u64, count: usize) -> Vec<(u64, Rational)> {
        let mut all: Vec<(u64, Rational)> = (1..=max_s)
            .map(|s| (s, bohr_gap(s as i64, alphas)))
            .collect();
        all.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        all.truncate(count);
        all
    }

    #[test]
    fn near_return_examples() {
        assert_eq!(near_return(&av(&[(41, 29)]), 29, 1), vec![(29, int(0))]);
        assert_eq!(near_return(&av(&[(1, 3), (1, 5)]), 15, 1), vec![(15, int(0))]);
        let a = av(&[(99, 70)]);
        assert_eq!(near_return(&a, 20, 1), vec![(12, ratio(1, 35))]);
        assert_eq!(near_return(&a, 20, 1), near_return_oracle(&a, 20, 1));
    }

    #[test]
    fn near_return_agrees_with_exhaustive_sort() {
        let a = av(&[(577, 408), (1351, 780)]);
        assert_eq!(near_return(&a, 3000, 12), near_return_oracle(&a, 3000, 12));
        let b = av(&[(-5, 7), (22, 9), (1, 1)]);
        assert_eq!(near_return(&b, 200, 30), near_return_oracle(&b, 200, 30));
    }

    #[test]
    fn near_return_bigint_path() {
        // Common denominator above i64 forces the arbitrary-precision route.
        let big = Rational::new(BigInt::from(7), BigInt::from(10u64).pow(20) + 1u32);
        let a = AlphaVector::new(vec![big, ratio(1, 3)]).unwrap();
        assert_eq!(near_return(&a, 60, 5), near_return_oracle(&a, 60, 5));
    }

    #[test]
    fn parse_alpha_vector() {
        let a = AlphaVector::parse("577/408, 1351/780").unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.to_string(), "577/408,1351/780");
        assert_eq!(a.common_denominator(), BigInt::from(26520));
        assert!(AlphaVector::parse("1/0").is_err());
    }

    fn rational_strategy() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..500).prop_map(|(p, q)| ratio(p, q))
    }

    proptest! {
        #[test]
        fn torus_norm_axioms(x in rational_strategy(), y in rational_strategy()) {
            let n = torus_norm(&x);
            prop_assert!(n >= int(0) && n <= ratio(1, 2));
            prop_assert_eq!(torus_norm(&(&x + int(1))), n.clone());
            prop_assert_eq!(torus_norm(&-&x), n.clone());
            prop_assert!(torus_norm(&(&x + &y)) <= n + torus_norm(&y));
        }

        #[test]
        fn gap_symmetric_in_s(s in -5000i64..5000, p in -50i64..50, q in 1i64..60) {
            let a = av(&[(p, q), (q, 61)]);
            prop_assert_eq!(bohr_gap(s, &a), bohr_gap(-s, &a));
        }

        #[test]
        fn gap_vanishes_on_common_denominator(m in -40i64..40, p in -50i64..50, q in 1i64..30, r in 1i64..30) {
            let a = av(&[(p, q), (1, r)]);
            let denom = a.common_denominator().to_i64().unwrap();
            prop_assert_eq!(bohr_gap(denom * m, &a), int(0));
        }

        #[test]
        fn membership_invariant_under_integer_shift(s in -500i64..500, p in -50i64..50, q in 1i64..40) {
            let delta = BohrThreshold::new(ratio(1, 10)).unwrap();
            let a = av(&[(p, q), (3, 11)]);
            let shifted = av(&[(p + q, q), (3, 11)]);
            prop_assert_eq!(in_restricted_set(s, &a, &delta), in_restricted_set(s, &shifted, &delta));
        }

        #[test]
        fn near_return_sorted_and_minimal(p in 1i64..200, q in 2i64..100, max_s in 1u64..150) {
            let a = av(&[(p, q), (q, 101)]);
            let got = near_return(&a, max_s, 5);
            prop_assert!(got.windows(2).all(|w| w[0].1 <= w[1].1));
            let min = (1..=max_s).map(|s| bohr_gap(s as i64, &a)).min().unwrap();
            prop_assert_eq!(&got[0].1, &min);
        }
    }
}
