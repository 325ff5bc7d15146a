//! Three-strand stirring protocols and their Burau action.
//!
//! For three rods the entropy forced by the rod motion is the log of the
//! spectral radius of the reduced Burau matrix. Generators are assigned
//! `s1 -> [[1,0],[1,1]]` and `s2^-1 -> [[1,1],[0,1]]`, and each successive
//! letter multiplies on the left, so `s1^k s2^-l` maps to
//! `[[1 + k l, l], [k, 1]]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::ltm::LtmParams;

/// Generator of the 3-strand braid group, `±1` or `±2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Generator(i8);

impl Generator {
    pub fn new(code: i8) -> Result<Self> {
        match code {
            1 | -1 | 2 | -2 => Ok(Self(code)),
            _ => Err(Error::BraidParse(format!("no generator with code {code}"))),
        }
    }

    pub fn index(self) -> u8 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Self(-self.0)
    }

    pub fn code(self) -> i8 {
        self.0
    }

    fn matrix(self) -> IntMat2 {
        match self.0 {
            1 => IntMat2([1, 0, 1, 1]),
            -1 => IntMat2([1, 0, -1, 1]),
            2 => IntMat2([1, -1, 0, 1]),
            -2 => IntMat2([1, 1, 0, 1]),
            _ => unreachable!("validated on construction"),
        }
    }
}

/// A non-empty stirring protocol, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    letters: Vec<Generator>,
}

impl BraidWord {
    pub fn new(letters: Vec<Generator>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Self { letters })
    }

    /// Build from signed codes (`1` for s1, `-2` for s2^-1, ...).
    pub fn from_codes(codes: &[i8]) -> Result<Self> {
        let letters = codes
            .iter()
            .map(|&c| Generator::new(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }

    /// The protocol `s1^k s2^-l` whose Burau matrix is `[[1 + k l, l], [k, 1]]`.
    pub fn twist_pair(k: i64, l: i64) -> Result<Self> {
        let mut codes = Vec::new();
        push_power(&mut codes, 1, k);
        push_power(&mut codes, 2, -l);
        Self::from_codes(&codes)
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|g| g.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    pub fn pow(&self, n: usize) -> Result<Self> {
        let letters: Vec<_> = (0..n).flat_map(|_| self.letters.iter().copied()).collect();
        Self::new(letters)
    }

    /// Cyclic rotation by `shift` letters.
    pub fn rotate(&self, shift: usize) -> Self {
        let mut letters = self.letters.clone();
        let n = letters.len();
        letters.rotate_left(shift % n);
        Self { letters }
    }
}

fn push_power(codes: &mut Vec<i8>, index: i8, exp: i64) {
    let code = if exp < 0 { -index } else { index };
    codes.extend(std::iter::repeat_n(code, exp.unsigned_abs() as usize));
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Whitespace-separated tokens `s<i>` or `s<i>^<n>`, `i` in {1, 2},
    /// `n` a nonzero integer.
    fn from_str(s: &str) -> Result<Self> {
        let mut codes = Vec::new();
        for token in s.split_whitespace() {
            let body = token
                .strip_prefix('s')
                .ok_or_else(|| Error::BraidParse(format!("token `{token}` must start with `s`")))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e),
                None => (body, "1"),
            };
            let index: i8 = match idx {
                "1" => 1,
                "2" => 2,
                _ => {
                    return Err(Error::BraidParse(format!(
                        "token `{token}`: generator index must be 1 or 2"
                    )))
                }
            };
            let exp: i64 = exp
                .parse()
                .map_err(|_| Error::BraidParse(format!("token `{token}`: bad exponent")))?;
            if exp == 0 {
                return Err(Error::BraidParse(format!(
                    "token `{token}`: exponent must be nonzero"
                )));
            }
            push_power(&mut codes, index, exp);
        }
        Self::from_codes(&codes)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let g = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == g {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let exp = if g.is_inverse() {
                -(run as i64)
            } else {
                run as i64
            };
            if exp == 1 {
                write!(f, "s{}", g.index())?;
            } else {
                write!(f, "s{}^{}", g.index(), exp)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Row-major integer 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct IntMat2([i64; 4]);

impl IntMat2 {
    const IDENTITY: IntMat2 = IntMat2([1, 0, 0, 1]);

    fn checked_mul(&self, r: &IntMat2) -> Option<IntMat2> {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = r.0;
        let dot = |x: i64, y: i64, z: i64, w: i64| x.checked_mul(y)?.checked_add(z.checked_mul(w)?);
        Some(IntMat2([
            dot(a, e, b, g)?,
            dot(a, f, b, h)?,
            dot(c, e, d, g)?,
            dot(c, f, d, h)?,
        ]))
    }
}

/// Reduced Burau matrix of a 3-strand braid (integer entries, det ±1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BurauMatrix(IntMat2);

impl BurauMatrix {
    pub fn entries(&self) -> [i64; 4] {
        self.0 .0
    }

    pub fn trace(&self) -> i128 {
        self.0 .0[0] as i128 + self.0 .0[3] as i128
    }

    pub fn det(&self) -> i128 {
        let [a, b, c, d] = self.0 .0.map(i128::from);
        a * d - b * c
    }

    pub fn is_identity(&self) -> bool {
        self.0 == IntMat2::IDENTITY
    }

    pub fn to_mat2(&self) -> Mat2 {
        let [a, b, c, d] = self.0 .0;
        Mat2::new(a as f64, b as f64, c as f64, d as f64)
    }

    /// Exact test for spectral radius 1 of a unimodular integer matrix.
    pub fn has_unit_spectral_radius(&self) -> bool {
        let tr = self.trace();
        match self.det() {
            1 => tr.abs() <= 2,
            -1 => tr == 0,
            _ => false,
        }
    }

    /// Product `self * rhs`, with overflow reported.
    pub fn checked_mul(&self, rhs: &BurauMatrix) -> Result<BurauMatrix> {
        self.0
            .checked_mul(&rhs.0)
            .map(BurauMatrix)
            .ok_or(Error::Overflow)
    }

    pub fn from_entries(entries: [i64; 4]) -> Self {
        Self(IntMat2(entries))
    }
}

impl fmt::Display for BurauMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0 .0;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

pub fn burau_matrix(word: &BraidWord) -> Result<BurauMatrix> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    word.letters
        .iter()
        .try_fold(BurauMatrix(IntMat2::IDENTITY), |acc, g| {
            BurauMatrix(g.matrix()).checked_mul(&acc)
        })
}

pub fn spectral_radius(m: &Mat2) -> f64 {
    m.spectral_radius()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidClass {
    PseudoAnosov,
    /// Spectral radius 1: finite-order or reducible, which the 2×2 Burau
    /// matrix cannot tell apart.
    FiniteOrderOrUndetected,
}

impl fmt::Display for BraidClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidClass::PseudoAnosov => f.write_str("pseudo-Anosov"),
            BraidClass::FiniteOrderOrUndetected => f.write_str("finite-order-or-undetected"),
        }
    }
}

/// Entropy per period forced by the rod motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBound {
    pub h_rods: f64,
    pub classification: BraidClass,
}

pub fn h_rods(word: &BraidWord) -> Result<EntropyBound> {
    let m = burau_matrix(word)?;
    Ok(entropy_of(&m))
}

fn entropy_of(m: &BurauMatrix) -> EntropyBound {
    if m.has_unit_spectral_radius() {
        EntropyBound {
            h_rods: 0.0,
            classification: BraidClass::FiniteOrderOrUndetected,
        }
    } else {
        let h = spectral_radius(&m.to_mat2()).ln().max(0.0);
        EntropyBound {
            h_rods: h,
            classification: BraidClass::PseudoAnosov,
        }
    }
}

/// Matrix of the cat map semi-conjugate to the twist map, `[[1+k l, l], [k, 1]]`.
pub fn cat_matrix(params: &LtmParams) -> BurauMatrix {
    let (k, l) = (params.k(), params.ell());
    BurauMatrix(IntMat2([1 + k * l, l, k, 1]))
}

/// Entropy of the generalized cat map with the same integer shear
/// strengths; a lower bound on the twist map's entropy.
pub fn ltm_lower_bound(params: &LtmParams) -> Result<f64> {
    let m = cat_matrix(params);
    if m.has_unit_spectral_radius() {
        return Err(Error::NonHyperbolicBound);
    }
    Ok(entropy_of(&m).h_rods)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN_LOG: f64 = 0.962_423_650_119_206_9;

    fn word(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn burau_examples() {
        assert_eq!(
            burau_matrix(&word("s1 s2^-1")).unwrap().entries(),
            [2, 1, 1, 1]
        );
        assert_eq!(
            burau_matrix(&word("s1 s2^5")).unwrap().entries(),
            [-4, -5, 1, 1]
        );
        assert!(burau_matrix(&word("s1 s1^-1")).unwrap().is_identity());
        assert_eq!(
            burau_matrix(&word("s1 s2")).unwrap().entries(),
            [0, -1, 1, 1]
        );
    }

    #[test]
    fn twist_pair_reproduces_closed_form() {
        for k in 1..=6 {
            for l in 1..=6 {
                let m = burau_matrix(&BraidWord::twist_pair(k, l).unwrap()).unwrap();
                assert_eq!(m.entries(), [1 + k * l, l, k, 1]);
            }
        }
    }

    #[test]
    fn entropy_examples() {
        let e = h_rods(&word("s1 s2^-1")).unwrap();
        assert!((e.h_rods - GOLDEN_LOG).abs() < 1e-12);
        assert_eq!(e.classification, BraidClass::PseudoAnosov);
        let e = h_rods(&word("s1 s2^5")).unwrap();
        assert!((e.h_rods - GOLDEN_LOG).abs() < 1e-12);
        let e = h_rods(&word("s1 s2")).unwrap();
        assert_eq!(e.h_rods, 0.0);
        assert_eq!(e.classification, BraidClass::FiniteOrderOrUndetected);
    }

    #[test]
    fn spectral_radius_of_periodic_braid() {
        // t^2 - t + 1 has roots on the unit circle
        let r = spectral_radius(&Mat2::new(0.0, -1.0, 1.0, 1.0));
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parser_accepts_and_rejects() {
        assert_eq!(word("s1 s2^-1").letters().len(), 2);
        assert_eq!(word("  s2^3 ").letters().len(), 3);
        assert!(matches!("".parse::<BraidWord>(), Err(Error::EmptyWord)));
        assert!(matches!(
            "s3".parse::<BraidWord>(),
            Err(Error::BraidParse(_))
        ));
        assert!(matches!(
            "s1^0".parse::<BraidWord>(),
            Err(Error::BraidParse(_))
        ));
        assert!(matches!(
            "x1".parse::<BraidWord>(),
            Err(Error::BraidParse(_))
        ));
        assert!(matches!(
            "s1^a".parse::<BraidWord>(),
            Err(Error::BraidParse(_))
        ));
        assert_eq!(word("s1 s2^5").to_string(), "s1 s2^5");
        assert_eq!(word("s1 s1 s2^-1").to_string(), "s1^2 s2^-1");
    }

    #[test]
    fn overflow_is_reported() {
        let long = BraidWord::twist_pair(1, 1).unwrap().pow(200).unwrap();
        assert!(matches!(burau_matrix(&long), Err(Error::Overflow)));
    }

    #[test]
    fn lower_bound_examples() {
        let ctr = LtmParams::new(0.5, 0.5, 1, 1).unwrap();
        let cor = LtmParams::new(0.5, 0.5, 1, -5).unwrap();
        assert!((ltm_lower_bound(&ctr).unwrap() - GOLDEN_LOG).abs() < 1e-12);
        assert!((ltm_lower_bound(&cor).unwrap() - GOLDEN_LOG).abs() < 1e-12);
        // trace 2 + k l in {-2, ..., 2}
        for l in -4..=-1 {
            let p = LtmParams::new(0.5, 0.5, 1, l).unwrap();
            assert_eq!(ltm_lower_bound(&p), Err(Error::NonHyperbolicBound));
        }
    }
}
