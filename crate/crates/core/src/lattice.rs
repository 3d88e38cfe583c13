//! Integer Gram-matrix computations and the Néron–Severi lattices of the
//! covering K3 surfaces.
//!
//! Everything is exact: determinants use fraction-free (Bareiss)
//! elimination, invariant factors come from a deterministic Smith normal
//! form, and signatures are read off the characteristic polynomial by
//! Descartes' rule (legitimate here because symmetric matrices have real
//! spectra). Intermediates are widened to `i128` even though the inputs
//! are tiny.
//!
//! On the strictly elliptic family the invariant lattice of rank `r` is
//!
//! ```text
//!     ⟨2⟩            r = 1
//!     U(2)           r = 2, δ = 0
//!     ⟨2⟩ ⊕ A_1      r = 2, δ = 1
//!     U(2) ⊕ A_1^{r-2}   r ≥ 3   (δ = 1)
//! ```
//!
//! with `U(2) = [[0,2],[2,0]]` and `A_1 = [[-2]]`; every one of them has
//! determinant `±2^r` and 2-elementary discriminant group `(Z/2)^r`.

use serde::Serialize;

use crate::error::{Error, Result};

/// A symmetric square integer matrix recording a lattice pairing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GramMatrix {
    entries: Vec<Vec<i64>>,
}

impl GramMatrix {
    /// Validates squareness and symmetry.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        for row in &entries {
            if row.len() != n {
                return Err(Error::InvalidGram(format!(
                    "row of length {} in a {n}x{n} matrix",
                    row.len()
                )));
            }
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate().take(i) {
                if entry != entries[j][i] {
                    return Err(Error::InvalidGram(format!(
                        "entries[{i}][{j}] = {entry} but entries[{j}][{i}] = {}",
                        entries[j][i]
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Dimension of the matrix (the lattice rank for nondegenerate input).
    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// The rank-one lattice `⟨2⟩ = [[2]]`.
    pub fn span_two() -> Self {
        Self { entries: vec![vec![2]] }
    }

    /// The twisted hyperbolic plane `U(2) = [[0,2],[2,0]]`.
    pub fn u2() -> Self {
        Self { entries: vec![vec![0, 2], vec![2, 0]] }
    }

    /// The root lattice `A_1 = [[-2]]`.
    pub fn a1() -> Self {
        Self { entries: vec![vec![-2]] }
    }

    /// Block-diagonal direct sum, blocks in the given order.
    pub fn direct_sum(blocks: &[GramMatrix]) -> Self {
        let n: usize = blocks.iter().map(GramMatrix::rank).sum();
        let mut entries = vec![vec![0; n]; n];
        let mut offset = 0;
        for block in blocks {
            let m = block.rank();
            for i in 0..m {
                for j in 0..m {
                    entries[offset + i][offset + j] = block.entries[i][j];
                }
            }
            offset += m;
        }
        Self { entries }
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> i64 {
        let n = self.rank();
        if n == 0 {
            return 1;
        }
        let mut m: Vec<Vec<i128>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&e| e as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                    return 0;
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        i64::try_from(sign * m[n - 1][n - 1]).expect("determinant fits i64 at these ranks")
    }

    /// Invariant factors, discriminant group and |det| via Smith normal form.
    pub fn smith_normal_form(&self) -> DiscriminantData {
        let factors = smith_invariant_factors(&self.entries);
        let length = factors.iter().filter(|&&d| d > 1).count();
        DiscriminantData {
            invariant_factors: factors,
            length,
            abs_determinant: self.determinant().abs(),
        }
    }

    /// Signature `(positive, negative, zero)` of the real quadratic form,
    /// from the characteristic polynomial and Descartes' rule of signs.
    pub fn signature(&self) -> (usize, usize, usize) {
        let coeffs = self.char_poly();
        let n = self.rank();
        let pos = descartes_sign_changes(&coeffs);
        // p(-λ): negate coefficients of odd powers of λ
        let reflected: Vec<i128> = coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| if (n - k) % 2 == 1 { -c } else { c })
            .collect();
        let neg = descartes_sign_changes(&reflected);
        (pos, neg, n - pos - neg)
    }

    /// Characteristic polynomial coefficients `[1, c_1, …, c_n]` of
    /// `λ^n + c_1 λ^{n-1} + … + c_n`, by the Faddeev–LeVerrier recursion.
    fn char_poly(&self) -> Vec<i128> {
        let n = self.rank();
        let a: Vec<Vec<i128>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&e| e as i128).collect())
            .collect();
        let mut coeffs = vec![1i128];
        let mut m = vec![vec![0i128; n]; n]; // M_0 = 0
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{k-1}·I
            let mut next = vec![vec![0i128; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0i128;
                    for t in 0..n {
                        acc += a[i][t] * m[t][j];
                    }
                    next[i][j] = acc;
                }
                next[i][i] += coeffs[k - 1];
            }
            let trace: i128 = (0..n).map(|i| {
                let mut acc = 0i128;
                for t in 0..n {
                    acc += a[i][t] * next[t][i];
                }
                acc
            })
            .sum();
            debug_assert_eq!(trace % k as i128, 0);
            coeffs.push(-trace / k as i128);
            m = next;
        }
        coeffs
    }
}

fn descartes_sign_changes(coeffs: &[i128]) -> usize {
    let mut changes = 0;
    let mut last = 0i128;
    for &c in coeffs {
        if c == 0 {
            continue;
        }
        if last != 0 && (c > 0) != (last > 0) {
            changes += 1;
        }
        last = c;
    }
    changes
}

/// Invariant factors of the K3 invariant lattice's discriminant group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantData {
    /// Smith normal form diagonal `d_1 | d_2 | … | d_n`, all ≥ 0; zeros
    /// (degenerate input) sort last.
    #[serde(rename = "factors")]
    pub invariant_factors: Vec<i64>,
    /// Number of nontrivial cyclic factors — the lattice length `a`.
    pub length: usize,
    /// |det| computed independently by elimination.
    #[serde(rename = "abs_det")]
    pub abs_determinant: i64,
}

impl DiscriminantData {
    /// The nontrivial cyclic factors `Z/d` with `d > 1`.
    pub fn group(&self) -> Vec<i64> {
        self.invariant_factors.iter().copied().filter(|&d| d > 1).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.invariant_factors.contains(&0)
    }
}

/// Smith normal form over Z. Pivot rule: smallest nonzero absolute value,
/// scanning rows before columns, so the reduction is deterministic.
#[allow(clippy::needless_range_loop)] // row pairs of one matrix
fn smith_invariant_factors(entries: &[Vec<i64>]) -> Vec<i64> {
    let n = entries.len();
    let mut m: Vec<Vec<i128>> = entries
        .iter()
        .map(|row| row.iter().map(|&e| e as i128).collect())
        .collect();
    for k in 0..n {
        // stops early when the remaining block is zero
        while let Some((pi, pj)) = pivot_position(&m, k) {
            m.swap(k, pi);
            if pj != k {
                for row in m.iter_mut() {
                    row.swap(k, pj);
                }
            }
            let mut dirty = false;
            for i in k + 1..n {
                let q = m[i][k].div_euclid(m[k][k]);
                if q != 0 {
                    for j in k..n {
                        m[i][j] -= q * m[k][j];
                    }
                }
                if m[i][k] != 0 {
                    dirty = true;
                }
            }
            for j in k + 1..n {
                let q = m[k][j].div_euclid(m[k][k]);
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[k];
                    }
                }
                if m[k][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                continue; // residues became the new smallest entries
            }
            break;
        }
    }
    let mut factors: Vec<i128> = (0..n).map(|i| m[i][i].abs()).collect();
    // enforce d_i | d_{i+1} by gcd/lcm folding; zeros bubble to the end
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (factors[i], factors[j]);
            if a == 0 && b == 0 {
                continue;
            }
            let g = gcd(a, b);
            factors[i] = g;
            factors[j] = a / g * b;
        }
    }
    factors
        .into_iter()
        .map(|d| i64::try_from(d).expect("factor fits i64"))
        .collect()
}

fn pivot_position(m: &[Vec<i128>], k: usize) -> Option<(usize, usize)> {
    let n = m.len();
    let mut best: Option<(usize, usize)> = None;
    for i in k..n {
        for j in k..n {
            if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The invariant lattice of the strictly elliptic K3 surface of rank
/// `ns_rank`, as a block-diagonal Gram matrix.
///
/// `delta = 0` exists only at rank 2 (the quadric case); every other rank
/// carries `delta = 1`.
pub fn ns_lattice_of(ns_rank: usize, delta: u8) -> Result<GramMatrix> {
    if !(1..=9).contains(&ns_rank) {
        return Err(Error::InvalidInvariants(format!(
            "ns_rank {ns_rank} outside 1..=9"
        )));
    }
    if delta > 1 {
        return Err(Error::InvalidInvariants(format!("delta {delta} not in {{0,1}}")));
    }
    if delta == 0 && ns_rank != 2 {
        return Err(Error::InvalidInvariants(format!(
            "delta = 0 requires ns_rank 2 on the strictly elliptic line, got {ns_rank}"
        )));
    }
    let gram = match (ns_rank, delta) {
        (1, _) => GramMatrix::span_two(),
        (2, 0) => GramMatrix::u2(),
        (2, 1) => GramMatrix::direct_sum(&[GramMatrix::span_two(), GramMatrix::a1()]),
        (r, _) => {
            let mut blocks = vec![GramMatrix::u2()];
            blocks.extend(std::iter::repeat_n(GramMatrix::a1(), r - 2));
            GramMatrix::direct_sum(&blocks)
        }
    };
    Ok(gram)
}

/// The valid `(ns_rank, delta)` pairs on the strictly elliptic line.
pub fn strictly_elliptic_pairs() -> Vec<(usize, u8)> {
    let mut pairs = vec![(1, 1), (2, 0), (2, 1)];
    pairs.extend((3..=9).map(|r| (r, 1)));
    pairs
}
