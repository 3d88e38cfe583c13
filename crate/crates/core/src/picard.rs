//! Exact arithmetic in the Picard lattice of a del Pezzo surface.
//!
//! The degree-`d` del Pezzo surface obtained by blowing up `p = 9 - d`
//! general points of the plane has Picard lattice `Z·L ⊕ Z·E_1 ⊕ … ⊕ Z·E_p`
//! with pairing `L² = 1`, `E_i² = -1`, `L·E_i = 0`. A [`DivisorClass`]
//! stores a class in the form
//!
//! ```text
//!     D = ℓ·L - a_1·E_1 - … - a_p·E_p
//! ```
//!
//! i.e. the stored coefficients `a_i` are the *negatives* of the `E_i`
//! coordinates. Under this sign convention the standard families read off
//! directly: the conic class through points 1..4 is `(2;1,1,1,1)` and the
//! exceptional class `E_1` is `(0;-1,0,…)`. The canonical class
//! `K = -3L + E_1 + … + E_p` is therefore stored as `ell = -3` with every
//! coefficient `-1`.
//!
//! Classes are ordered lexicographically on `(ell, coeffs)`; every module
//! that emits lists of classes uses this total order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest number of blown-up points carrying a del Pezzo surface.
pub const MAX_POINTS: usize = 8;

/// A divisor class `ℓ·L - Σ a_i·E_i` on the blow-up of `coeffs.len()` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    ell: i64,
    coeffs: Vec<i64>,
}

impl DivisorClass {
    /// Builds the class `ℓ·L - Σ a_i·E_i`.
    pub fn new(ell: i64, coeffs: Vec<i64>) -> Self {
        Self { ell, coeffs }
    }

    /// Coefficient of `L`.
    pub fn ell(&self) -> i64 {
        self.ell
    }

    /// The coefficients `a_1 … a_p`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Number of blown-up points `p` this class lives on.
    pub fn num_points(&self) -> usize {
        self.coeffs.len()
    }

    /// The exceptional class `E_i` (1-based index), stored as `a_i = -1`.
    pub fn exceptional(index: usize, num_points: usize) -> Result<Self> {
        if index == 0 || index > num_points {
            return Err(Error::Parse {
                position: 0,
                message: format!("exceptional index {index} out of 1..={num_points}"),
            });
        }
        let mut coeffs = vec![0; num_points];
        coeffs[index - 1] = -1;
        Ok(Self::new(0, coeffs))
    }

    /// The pull-back `L` of a line.
    pub fn line(num_points: usize) -> Self {
        Self::new(1, vec![0; num_points])
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.num_points() == other.num_points() {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                left: self.num_points(),
                right: other.num_points(),
            })
        }
    }

    /// Intersection product `x·y = ℓ_x ℓ_y - Σ a_i b_i`.
    pub fn intersect(&self, other: &Self) -> Result<i64> {
        self.check_arity(other)?;
        let mut acc = self.ell * other.ell;
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            acc -= a * b;
        }
        Ok(acc)
    }

    /// Self-intersection `D²`.
    pub fn self_intersection(&self) -> i64 {
        self.intersect(self).expect("same class")
    }

    /// `self + c·other`; used by reflections and pair searches.
    pub fn plus_scaled(&self, c: i64, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + c * b)
            .collect();
        Ok(Self::new(self.ell + c * other.ell, coeffs))
    }

    /// Component-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.plus_scaled(1, other)
    }

    /// Component-wise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.plus_scaled(-1, other)
    }

    /// Canonical total order: lexicographic on `(ell, coeffs)`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.ell, &self.coeffs).cmp(&(other.ell, &other.coeffs))
    }

    /// The same class with coefficients sorted descending: the orbit
    /// representative under permutations of the blown-up points.
    pub fn sorted_descending(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(self.ell, coeffs)
    }
}

/// The canonical class `K = -3L + E_1 + … + E_p`, stored as
/// `(-3; -1, …, -1)`. Its self-intersection is the degree `9 - p`.
pub fn canonical_class(num_points: usize) -> Result<DivisorClass> {
    if num_points > MAX_POINTS {
        return Err(Error::InvalidNumPoints { num_points });
    }
    Ok(DivisorClass::new(-3, vec![-1; num_points]))
}

/// Gram matrix of the basis `(L, E_1, …, E_p)`: `diag(1, -1, …, -1)`.
pub fn basis_gram(num_points: usize) -> Vec<Vec<i64>> {
    let n = num_points + 1;
    let mut g = vec![vec![0; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = if i == 0 { 1 } else { -1 };
    }
    g
}

impl fmt::Display for DivisorClass {
    /// Compact form `(ℓ;a1,a2,…,ap)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.ell)?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Emits the compact form of a class; inverse of [`parse_class`].
pub fn format_class(class: &DivisorClass) -> String {
    class.to_string()
}

/// Parses either class grammar.
///
/// Compact form: `(ℓ;a1,a2,…,ap)` with signed decimal integers (spaces
/// allowed between tokens). Symbolic form: a signed sum of terms `cL` and
/// `cEk` in any order, e.g. `2L-E1-E2-E3-E4`; missing terms are zero and
/// repeated terms accumulate. The arity must match `num_points` exactly.
pub fn parse_class(text: &str, num_points: usize) -> Result<DivisorClass> {
    let trimmed_start = text.len() - text.trim_start().len();
    if text.trim_start().starts_with('(') {
        parse_compact(text, num_points)
    } else {
        parse_symbolic(text, num_points, trimmed_start)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", byte as char)))
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Parse { position: self.pos, message }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.error("expected an integer".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.error("integer out of range".into()))
    }
}

fn parse_compact(text: &str, num_points: usize) -> Result<DivisorClass> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    cur.expect(b'(')?;
    let ell = cur.integer()?;
    cur.skip_ws();
    cur.expect(b';')?;
    let mut coeffs = Vec::with_capacity(num_points);
    cur.skip_ws();
    if cur.peek() != Some(b')') {
        loop {
            coeffs.push(cur.integer()?);
            cur.skip_ws();
            match cur.peek() {
                Some(b',') => {
                    cur.pos += 1;
                }
                Some(b')') => break,
                _ => return Err(cur.error("expected ',' or ')'".into())),
            }
        }
    }
    cur.expect(b')')?;
    cur.skip_ws();
    if cur.pos != cur.bytes.len() {
        return Err(cur.error("trailing input after class".into()));
    }
    if coeffs.len() != num_points {
        return Err(Error::Parse {
            position: 0,
            message: format!("expected {num_points} coefficients, found {}", coeffs.len()),
        });
    }
    Ok(DivisorClass::new(ell, coeffs))
}

fn parse_symbolic(text: &str, num_points: usize, start: usize) -> Result<DivisorClass> {
    let mut cur = Cursor::new(text);
    cur.pos = start;
    let mut ell = 0i64;
    // Stored coefficients are the negatives of the E_i coordinates, so a
    // symbolic term c·E_k contributes a_k -= c.
    let mut coeffs = vec![0i64; num_points];
    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            if first {
                return Err(cur.error("empty class expression".into()));
            }
            break;
        }
        let sign = match cur.peek() {
            Some(b'+') => {
                cur.pos += 1;
                1
            }
            Some(b'-') => {
                cur.pos += 1;
                -1
            }
            _ if first => 1,
            _ => return Err(cur.error("expected '+' or '-' between terms".into())),
        };
        cur.skip_ws();
        let mut magnitude = 1i64;
        if cur.peek().is_some_and(|b| b.is_ascii_digit()) {
            magnitude = cur.integer()?;
            cur.skip_ws();
        }
        match cur.peek() {
            Some(b'L') => {
                cur.pos += 1;
                ell += sign * magnitude;
            }
            Some(b'E') => {
                cur.pos += 1;
                let index_pos = cur.pos;
                let index = cur.integer()?;
                if index < 1 || index as usize > num_points {
                    return Err(Error::Parse {
                        position: index_pos,
                        message: format!("index E{index} out of 1..={num_points}"),
                    });
                }
                coeffs[index as usize - 1] -= sign * magnitude;
            }
            _ => return Err(cur.error("expected 'L' or 'E<k>'".into())),
        }
        first = false;
    }
    Ok(DivisorClass::new(ell, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(ell: i64, coeffs: &[i64]) -> DivisorClass {
        DivisorClass::new(ell, coeffs.to_vec())
    }

    #[test]
    fn conic_class_self_intersection_vanishes() {
        let d = cls(1, &[1]);
        assert_eq!(d.self_intersection(), 0);
    }

    #[test]
    fn canonical_self_intersection_is_degree() {
        for p in 0..=MAX_POINTS {
            let k = canonical_class(p).unwrap();
            assert_eq!(k.self_intersection(), 9 - p as i64);
        }
        assert_eq!(canonical_class(6).unwrap().self_intersection(), 3);
        assert!(matches!(
            canonical_class(9),
            Err(Error::InvalidNumPoints { num_points: 9 })
        ));
    }

    #[test]
    fn conic_dot_canonical_is_minus_two() {
        let d = cls(2, &[1, 1, 1, 1]);
        let k = canonical_class(4).unwrap();
        assert_eq!(d.intersect(&k).unwrap(), -2);
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let a = cls(1, &[1, 0]);
        let b = cls(1, &[1]);
        assert_eq!(
            a.intersect(&b),
            Err(Error::ArityMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn basis_gram_signature() {
        for p in 0..=MAX_POINTS {
            let g = basis_gram(p);
            assert_eq!(g[0][0], 1);
            let diag_product: i64 = (0..=p).map(|i| g[i][i]).product();
            assert_eq!(diag_product, if p % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn parses_compact_examples() {
        assert_eq!(parse_class("(2;1,1,1,1)", 4).unwrap(), cls(2, &[1, 1, 1, 1]));
        assert_eq!(
            parse_class("(0;-1,0)", 2).unwrap(),
            DivisorClass::exceptional(1, 2).unwrap()
        );
        assert_eq!(parse_class("(-3;)", 0).unwrap(), cls(-3, &[]));
        assert_eq!(parse_class(" ( 1 ; 1 , 0 ) ", 2).unwrap(), cls(1, &[1, 0]));
    }

    #[test]
    fn parses_symbolic_examples() {
        assert_eq!(
            parse_class("2L-E1-E2-E3-E4", 4).unwrap(),
            cls(2, &[1, 1, 1, 1])
        );
        assert_eq!(parse_class("E1", 2).unwrap(), cls(0, &[-1, 0]));
        assert_eq!(parse_class("-3L + E1 + E2", 2).unwrap(), cls(-3, &[-1, -1]));
        // terms in any order, repeated terms accumulate
        assert_eq!(parse_class("-E2 + L + L", 2).unwrap(), cls(2, &[0, 1]));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_class("(1;1,1)", 4), Err(Error::Parse { .. })));
        assert!(matches!(parse_class("(1;1,1", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_class("(1;1,1)x", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_class("2L-E9", 4), Err(Error::Parse { .. })));
        assert!(matches!(parse_class("2L-E0", 4), Err(Error::Parse { .. })));
        assert!(matches!(parse_class("2M", 4), Err(Error::Parse { .. })));
        assert!(matches!(parse_class("", 4), Err(Error::Parse { .. })));
        let err = parse_class("(1;2,x)", 2).unwrap_err();
        assert!(matches!(err, Error::Parse { position: 5, .. }), "{err:?}");
    }

    #[test]
    fn round_trip_is_identity() {
        for class in [cls(1, &[1]), cls(0, &[-1, 0]), cls(6, &[3, 2, 2, 2, 2, 2, 2, 2])] {
            let text = format_class(&class);
            assert_eq!(parse_class(&text, class.num_points()).unwrap(), class);
        }
        assert_eq!(format_class(&parse_class("(1;1)", 1).unwrap()), "(1;1)");
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let mut classes = vec![cls(1, &[1, 1]), cls(0, &[0, -1]), cls(0, &[-1, 0])];
        classes.sort();
        assert_eq!(
            classes,
            vec![cls(0, &[-1, 0]), cls(0, &[0, -1]), cls(1, &[1, 1])]
        );
    }
}
