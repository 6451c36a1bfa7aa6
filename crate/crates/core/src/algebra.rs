//! Cayley-Dickson multiplication over the canonical basis.
//!
//! A unit of the level-`N` algebra is either a level-`N-1` unit embedded in
//! the low half, `(e, 0)`, or in the high half, `(0, e)`. Basis products are
//! computed by structural recursion on that doubling, so each entry costs
//! O(level) instead of a full `2^N`-dimensional multiplication. The product
//! index is always `a ^ b`; only the sign carries information.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Hard cap for table construction; a level-12 table already holds ~16M entries.
pub const MAX_TABLE_LEVEL: u32 = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unit index {index} out of range for level {level}")]
    IndexOutOfRange { level: u32, index: u32 },
    #[error("level {requested} exceeds the configured bound {bound}")]
    LevelTooLarge { requested: u32, bound: u32 },
    #[error("expected levels differing by one, got {upper} and {lower}")]
    LevelGapNotOne { upper: u32, lower: u32 },
    #[error("operand levels differ: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },
    #[error("coefficient vector of length {got} does not match level {level} (needs {want})")]
    BadCoefficientLength { level: u32, got: usize, want: usize },
}

/// A signed basis unit `±e_index`: what any product of two basis units reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedUnit {
    /// +1 or -1.
    pub sign: i8,
    pub index: u32,
}

impl SignedUnit {
    pub fn positive(index: u32) -> Self {
        SignedUnit { sign: 1, index }
    }

    pub fn negative(index: u32) -> Self {
        SignedUnit { sign: -1, index }
    }

    fn with_sign(self, sign: i8) -> Self {
        SignedUnit {
            sign: self.sign * sign,
            index: self.index,
        }
    }

    fn offset(self, by: u32) -> Self {
        SignedUnit {
            sign: self.sign,
            index: self.index + by,
        }
    }
}

impl fmt::Display for SignedUnit {
    /// The table-cell notation: `+13`, `-0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.sign >= 0 { '+' } else { '-' }, self.index)
    }
}

fn check_unit(level: u32, index: u32) -> Result<(), AlgebraError> {
    if level >= 32 || u64::from(index) >= 1u64 << level {
        Err(AlgebraError::IndexOutOfRange { level, index })
    } else {
        Ok(())
    }
}

/// Sign picked up when conjugating `e_u`: the real unit is fixed, imaginaries negate.
fn conjugation_sign(unit: u32) -> i8 {
    if unit == 0 {
        1
    } else {
        -1
    }
}

/// Conjugate of a basis unit: `+e_0` for the real unit, `-e_a` otherwise.
pub fn basis_conjugate(level: u32, unit: u32) -> Result<SignedUnit, AlgebraError> {
    check_unit(level, unit)?;
    Ok(SignedUnit {
        sign: conjugation_sign(unit),
        index: unit,
    })
}

/// One doubling step: the product of two units of the doubled algebra in
/// terms of products of the half-size algebra. `half` is the half size,
/// `prev` looks up products one level down.
///
/// Writing low units as `(x, 0)` and high units as `(0, y)`:
/// `(x,0)(X,0) = (xX, 0)`, `(x,0)(0,Y) = (0, x*Y)`,
/// `(0,y)(X,0) = (0, Xy)`, `(0,y)(0,Y) = (-Yy*, 0)`.
fn doubled_product(half: u32, a: u32, b: u32, prev: impl Fn(u32, u32) -> SignedUnit) -> SignedUnit {
    let (a_lo, a_hi) = (a & (half - 1), a >= half);
    let (b_lo, b_hi) = (b & (half - 1), b >= half);
    match (a_hi, b_hi) {
        (false, false) => prev(a_lo, b_lo),
        (false, true) => prev(a_lo, b_lo).with_sign(conjugation_sign(a_lo)).offset(half),
        (true, false) => prev(b_lo, a_lo).offset(half),
        (true, true) => prev(b_lo, a_lo).with_sign(-conjugation_sign(a_lo)),
    }
}

fn product_rec(level: u32, a: u32, b: u32) -> SignedUnit {
    if level == 0 {
        return SignedUnit::positive(0);
    }
    let half = 1u32 << (level - 1);
    doubled_product(half, a, b, |x, y| product_rec(level - 1, x, y))
}

/// Product `e_a · e_b` at the given level. The result index is `a ^ b`.
pub fn basis_product(level: u32, a: u32, b: u32) -> Result<SignedUnit, AlgebraError> {
    check_unit(level, a)?;
    check_unit(level, b)?;
    Ok(product_rec(level, a, b))
}

/// Full multiplication table of the `2^level` basis units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultTable {
    level: u32,
    /// Row-major: `entries[a * size + b]` is `e_a · e_b`.
    entries: Vec<SignedUnit>,
}

impl MultTable {
    /// Builds the table bottom-up, doubling level by level from the real line.
    pub fn build(level: u32) -> Result<Self, AlgebraError> {
        Self::build_bounded(level, MAX_TABLE_LEVEL)
    }

    /// Like [`MultTable::build`] with an explicit level bound (still capped at
    /// [`MAX_TABLE_LEVEL`]).
    pub fn build_bounded(level: u32, bound: u32) -> Result<Self, AlgebraError> {
        if level > bound.min(MAX_TABLE_LEVEL) {
            return Err(AlgebraError::LevelTooLarge {
                requested: level,
                bound: bound.min(MAX_TABLE_LEVEL),
            });
        }
        let mut table = MultTable {
            level: 0,
            entries: vec![SignedUnit::positive(0)],
        };
        for _ in 0..level {
            table = table.doubled();
        }
        Ok(table)
    }

    /// The table one level up, computed from this one's entries.
    fn doubled(&self) -> MultTable {
        let half = self.size() as u32;
        let size = 2 * half;
        let mut entries = Vec::with_capacity((size as usize) * (size as usize));
        for a in 0..size {
            for b in 0..size {
                entries.push(doubled_product(half, a, b, |x, y| self.entry(x, y)));
            }
        }
        MultTable {
            level: self.level + 1,
            entries,
        }
    }

    /// Reassembles a table from raw entries (as parsed from an export).
    pub fn from_entries(level: u32, entries: Vec<SignedUnit>) -> Result<Self, AlgebraError> {
        let size = 1usize << level;
        if entries.len() != size * size {
            return Err(AlgebraError::BadCoefficientLength {
                level,
                got: entries.len(),
                want: size * size,
            });
        }
        Ok(MultTable { level, entries })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn size(&self) -> usize {
        1usize << self.level
    }

    /// Looks up `e_a · e_b`. Panics if an index is out of range.
    pub fn entry(&self, a: u32, b: u32) -> SignedUnit {
        let size = self.size();
        self.entries[a as usize * size + b as usize]
    }

    pub fn entries(&self) -> &[SignedUnit] {
        &self.entries
    }

    /// True iff `sub` is exactly the upper-left block of this table, i.e. the
    /// sub-algebra embedding is entrywise. Levels must differ by one.
    pub fn nests(&self, sub: &MultTable) -> Result<bool, AlgebraError> {
        if self.level != sub.level + 1 {
            return Err(AlgebraError::LevelGapNotOne {
                upper: self.level,
                lower: sub.level,
            });
        }
        let half = sub.size() as u32;
        for a in 0..half {
            for b in 0..half {
                if self.entry(a, b) != sub.entry(a, b) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// An algebra element as integer coordinates over the canonical basis.
///
/// Multiplication runs the doubling recursion on full coordinate vectors,
/// which is what makes it an independent cross-check for the basis-level
/// table: the two share no code path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdElement {
    level: u32,
    coeffs: Vec<i64>,
}

impl CdElement {
    pub fn new(level: u32, coeffs: Vec<i64>) -> Result<Self, AlgebraError> {
        let want = 1usize << level;
        if coeffs.len() != want {
            return Err(AlgebraError::BadCoefficientLength {
                level,
                got: coeffs.len(),
                want,
            });
        }
        Ok(CdElement { level, coeffs })
    }

    pub fn zero(level: u32) -> Self {
        CdElement {
            level,
            coeffs: vec![0; 1usize << level],
        }
    }

    pub fn basis(level: u32, index: u32) -> Result<Self, AlgebraError> {
        check_unit(level, index)?;
        let mut element = CdElement::zero(level);
        element.coeffs[index as usize] = 1;
        Ok(element)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Conjugation by recursion: `(x, y)* = (x*, -y)`, reals fixed.
    pub fn conjugate(&self) -> Self {
        CdElement {
            level: self.level,
            coeffs: conjugate_slice(&self.coeffs),
        }
    }

    /// The doubled-pair product `(x,y)(X,Y) = (xX - Yy*, x*Y + Xy)` applied
    /// recursively to the coordinate halves.
    pub fn multiply(&self, rhs: &CdElement) -> Result<CdElement, AlgebraError> {
        if self.level != rhs.level {
            return Err(AlgebraError::LevelMismatch {
                left: self.level,
                right: rhs.level,
            });
        }
        Ok(CdElement {
            level: self.level,
            coeffs: multiply_slices(&self.coeffs, &rhs.coeffs),
        })
    }

    /// If the element is exactly `±e_k`, returns it as a signed unit.
    pub fn as_signed_unit(&self) -> Option<SignedUnit> {
        let mut found = None;
        for (i, &c) in self.coeffs.iter().enumerate() {
            match c {
                0 => {}
                1 | -1 if found.is_none() => {
                    found = Some(SignedUnit {
                        sign: c as i8,
                        index: i as u32,
                    })
                }
                _ => return None,
            }
        }
        found
    }
}

fn conjugate_slice(x: &[i64]) -> Vec<i64> {
    if x.len() == 1 {
        return x.to_vec();
    }
    let half = x.len() / 2;
    let mut out = conjugate_slice(&x[..half]);
    out.extend(x[half..].iter().map(|c| -c));
    out
}

fn multiply_slices(x: &[i64], y: &[i64]) -> Vec<i64> {
    if x.len() == 1 {
        return vec![x[0] * y[0]];
    }
    let half = x.len() / 2;
    let (a, b) = x.split_at(half);
    let (c, d) = y.split_at(half);
    // (a,b)(c,d) = (ac - d b*, a* d + c b)
    let mut lo = multiply_slices(a, c);
    for (l, t) in lo.iter_mut().zip(multiply_slices(d, &conjugate_slice(b))) {
        *l -= t;
    }
    let mut hi = multiply_slices(&conjugate_slice(a), d);
    for (h, t) in hi.iter_mut().zip(multiply_slices(c, b)) {
        *h += t;
    }
    lo.extend(hi);
    lo
}
