//! Quadratic forms on finite-dimensional vector spaces over the two-element
//! field, and their Arf invariant computed two independent ways: the majority
//! ("democratic") count over all vectors, and the symplectic-basis sum
//! `sum q(a_i) q(b_i) mod 2`. The two routes cross-check each other.
//!
//! A form is stored as upper-triangular coefficients `c_ij` for `i <= j`,
//! defining `q(x) = sum c_ij x_i x_j`; there is no constant term, so q(0) = 0
//! is structural. The associated bilinear form is the polarization
//! `(x, y) = q(x+y) + q(x) + q(y)`, which over F2 is alternating.

use std::fmt;

use crate::error::{Error, Result};

/// Dimension cap for exhaustive vector enumeration.
pub const ENUMERATION_BOUND: usize = 24;

/// A vector over the two-element field, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VectorF2 {
    bits: u32,
    dim: usize,
}

impl VectorF2 {
    pub fn new(bits: u32, dim: usize) -> VectorF2 {
        debug_assert!(dim <= 32 && (dim == 32 || bits < (1u32 << dim)));
        VectorF2 { bits, dim }
    }

    pub fn from_bits(bits: &[u8]) -> VectorF2 {
        let mut mask = 0u32;
        for (i, b) in bits.iter().enumerate() {
            if *b != 0 {
                mask |= 1 << i;
            }
        }
        VectorF2 {
            bits: mask,
            dim: bits.len(),
        }
    }

    /// Standard basis vector e_i (1-indexed to match the form literals).
    pub fn standard(i: usize, dim: usize) -> VectorF2 {
        debug_assert!(1 <= i && i <= dim);
        VectorF2 {
            bits: 1 << (i - 1),
            dim,
        }
    }

    pub fn zero(dim: usize) -> VectorF2 {
        VectorF2 { bits: 0, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    /// Component-wise sum over F2.
    pub fn xor(&self, other: &VectorF2) -> VectorF2 {
        debug_assert_eq!(self.dim, other.dim);
        VectorF2 {
            bits: self.bits ^ other.bits,
            dim: self.dim,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }
}

impl fmt::Display for VectorF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", u32::from(self.bit(i)))?;
        }
        write!(f, ")")
    }
}

/// A quadratic form over F2 in upper-triangular coefficient storage.
///
/// `rows[i]` holds the bits `c_ij` for `j >= i` (0-indexed internally).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticFormF2 {
    dim: usize,
    rows: Vec<u32>,
}

impl QuadraticFormF2 {
    /// Build from 1-indexed monomial terms `(i, j)` with `i <= j` meaning
    /// `x_i x_j` (diagonal terms `(i, i)` mean `x_i^2`). Repeated terms
    /// cancel over F2.
    pub fn from_terms(dim: usize, terms: &[(usize, usize)]) -> Result<QuadraticFormF2> {
        let mut rows = vec![0u32; dim];
        for &(i, j) in terms {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            if i < 1 || j > dim {
                return Err(Error::Parse(format!(
                    "monomial x{i}*x{j} is out of range for dimension {dim}"
                )));
            }
            rows[i - 1] ^= 1 << (j - 1);
        }
        Ok(QuadraticFormF2 { dim, rows })
    }

    /// Parse a form literal like `x1*x2 + x3^2 + x3*x4`. The dimension is
    /// the largest index mentioned unless `dim` forces a larger one.
    pub fn parse(text: &str, dim: Option<usize>) -> Result<QuadraticFormF2> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |t: &str| Error::Parse(format!("invalid form term {t:?}"));
        let mut terms: Vec<(usize, usize)> = Vec::new();
        let mut max_index = 0usize;
        if compact != "0" {
            for term in compact.split('+') {
                let (i, j) = if let Some((a, b)) = term.split_once('*') {
                    (
                        parse_var(a).ok_or_else(|| bad(term))?,
                        parse_var(b).ok_or_else(|| bad(term))?,
                    )
                } else if let Some((a, p)) = term.split_once('^') {
                    if p != "2" {
                        return Err(bad(term));
                    }
                    let i = parse_var(a).ok_or_else(|| bad(term))?;
                    (i, i)
                } else {
                    // A bare x_i: as a function over F2 this is x_i^2.
                    let i = parse_var(term).ok_or_else(|| bad(term))?;
                    (i, i)
                };
                max_index = max_index.max(i).max(j);
                terms.push((i, j));
            }
        }
        let dim = dim.unwrap_or(0).max(max_index);
        if dim == 0 {
            return Err(Error::Parse(
                "form has no variables and no dimension".to_string(),
            ));
        }
        if dim > 32 {
            return Err(Error::Parse(format!(
                "dimension {dim} exceeds the supported 32"
            )));
        }
        QuadraticFormF2::from_terms(dim, &terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// One coefficient, 1-indexed with `i <= j`.
    pub fn coefficient(&self, i: usize, j: usize) -> bool {
        debug_assert!(1 <= i && i <= j && j <= self.dim);
        self.rows[i - 1] >> (j - 1) & 1 == 1
    }

    fn check_dim(&self, x: &VectorF2) -> Result<()> {
        if x.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                form: self.dim,
                vector: x.dim(),
            })
        }
    }

    /// Evaluate `q(x) = sum_{i<=j} c_ij x_i x_j mod 2`.
    pub fn evaluate(&self, x: &VectorF2) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.eval_bits(x.bits()))
    }

    fn eval_bits(&self, x: u32) -> bool {
        let mut acc = 0u32;
        for (i, row) in self.rows.iter().enumerate() {
            if x >> i & 1 == 1 {
                acc ^= (row & x).count_ones();
            }
        }
        acc & 1 == 1
    }

    /// The associated bilinear form `(x, y) = q(x+y) + q(x) + q(y)`.
    pub fn bilinear(&self, x: &VectorF2, y: &VectorF2) -> Result<bool> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.bilinear_bits(x.bits(), y.bits()))
    }

    fn bilinear_bits(&self, x: u32, y: u32) -> bool {
        self.eval_bits(x ^ y) ^ self.eval_bits(x) ^ self.eval_bits(y)
    }

    /// Gram matrix rows of the polarization on the standard basis.
    fn gram_rows(&self) -> Vec<u32> {
        // Polarizing kills the diagonal: (e_i, e_j) = c_ij for i != j.
        let mut gram = vec![0u32; self.dim];
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.rows[i] >> j & 1 == 1 {
                    gram[i] |= 1 << j;
                    gram[j] |= 1 << i;
                }
            }
        }
        gram
    }

    /// True iff the polarization's Gram matrix is invertible over F2.
    pub fn is_nondegenerate(&self) -> bool {
        let mut rows = self.gram_rows();
        let mut rank = 0;
        for col in 0..self.dim {
            if let Some(p) = (rank..self.dim).find(|&r| rows[r] >> col & 1 == 1) {
                rows.swap(rank, p);
                let pivot = rows[rank];
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && *row >> col & 1 == 1 {
                        *row ^= pivot;
                    }
                }
                rank += 1;
            }
        }
        rank == self.dim
    }

    /// Number of vectors with q(x) = 1, by exhaustive enumeration.
    pub fn count_ones(&self) -> Result<u64> {
        if self.dim > ENUMERATION_BOUND {
            return Err(Error::EnumerationBound {
                dim: self.dim,
                bound: ENUMERATION_BOUND,
            });
        }
        let mut count = 0u64;
        for x in 0..(1u32 << self.dim) {
            if self.eval_bits(x) {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Majority-rule Arf invariant: 1 iff q takes the value 1 on more than
    /// half of the vectors. An exact tie cannot occur for a nondegenerate
    /// form; finding one is reported as an internal inconsistency rather
    /// than silently resolved.
    pub fn arf_democratic(&self) -> Result<u8> {
        let count = self.count_ones()?;
        let half = 1u64 << (self.dim - 1);
        if count == half {
            return Err(Error::Inconsistency(format!(
                "exactly half of the {} vectors evaluate to 1; the majority rule is undefined",
                1u64 << self.dim
            )));
        }
        Ok(u8::from(count > half))
    }

    /// Canonical literal: monomials in (i, j) order joined by ` + `.
    pub fn canonical_string(&self) -> String {
        let mut terms = Vec::new();
        for i in 1..=self.dim {
            for j in i..=self.dim {
                if self.coefficient(i, j) {
                    terms.push(if i == j {
                        format!("x{i}^2")
                    } else {
                        format!("x{i}*x{j}")
                    });
                }
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    /// Greedy symplectic basis for the polarization: pick a pair (x, y) with
    /// (x, y) = 1, then restrict to its orthogonal complement and repeat.
    pub fn symplectic_basis(&self) -> Result<SymplecticBasis> {
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let mut pairs = Vec::new();
        // Row-reduced spanning set of the current orthogonal complement.
        let mut space: Vec<u32> = (0..self.dim).map(|i| 1u32 << i).collect();
        while !space.is_empty() {
            let x = space[0];
            let y = *space[1..]
                .iter()
                .find(|&&v| self.bilinear_bits(x, v))
                .ok_or_else(|| {
                    Error::Inconsistency(
                        "no hyperbolic partner in a nondegenerate space".to_string(),
                    )
                })?;
            pairs.push((VectorF2::new(x, self.dim), VectorF2::new(y, self.dim)));
            let projected: Vec<u32> = space
                .iter()
                .filter(|&&v| v != x && v != y)
                .map(|&v| {
                    let mut w = v;
                    if self.bilinear_bits(v, y) {
                        w ^= x;
                    }
                    if self.bilinear_bits(v, x) {
                        w ^= y;
                    }
                    w
                })
                .collect();
            space = row_reduce(projected);
        }
        Ok(SymplecticBasis { pairs })
    }

    /// Symplectic-route Arf invariant: `sum q(a_i) q(b_i) mod 2` over any
    /// symplectic basis. Basis independence is a tested property.
    pub fn arf_symplectic(&self) -> Result<u8> {
        let basis = self.symplectic_basis()?;
        let mut acc = false;
        for (a, b) in &basis.pairs {
            acc ^= self.evaluate(a)? & self.evaluate(b)?;
        }
        Ok(u8::from(acc))
    }
}

fn parse_var(text: &str) -> Option<usize> {
    let digits = text.strip_prefix('x')?;
    let i: usize = digits.parse().ok()?;
    (i >= 1).then_some(i)
}

/// Reduced row-echelon basis of the span of the given bitmask vectors.
fn row_reduce(rows: Vec<u32>) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    for row in rows {
        let mut v = row;
        for &b in &out {
            let lead = b & b.wrapping_neg();
            if v & lead != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            for b in out.iter_mut() {
                let lead = v & v.wrapping_neg();
                if *b & lead != 0 {
                    *b ^= v;
                }
            }
            out.push(v);
        }
    }
    out.sort_unstable();
    out
}

/// Hyperbolic pairs `(a_i, b_i)` with `(a_i, b_j) = delta_ij` and all other
/// pairings zero for the owning form's polarization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticBasis {
    pairs: Vec<(VectorF2, VectorF2)>,
}

impl SymplecticBasis {
    pub fn pairs(&self) -> &[(VectorF2, VectorF2)] {
        &self.pairs
    }

    /// Check the defining pairings and linear independence against a form.
    pub fn verify(&self, q: &QuadraticFormF2) -> Result<bool> {
        if 2 * self.pairs.len() != q.dim() {
            return Ok(false);
        }
        let mut all: Vec<VectorF2> = Vec::new();
        for (a, b) in &self.pairs {
            all.push(*a);
            all.push(*b);
        }
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if !q.bilinear(a, b)? {
                return Ok(false);
            }
            for (j, (a2, b2)) in self.pairs.iter().enumerate() {
                if i != j
                    && (q.bilinear(a, a2)?
                        || q.bilinear(b, b2)?
                        || q.bilinear(a, b2)?
                        || q.bilinear(b, a2)?)
                {
                    return Ok(false);
                }
            }
        }
        let independent = row_reduce(all.iter().map(VectorF2::bits).collect()).len() == q.dim();
        Ok(independent)
    }
}
