//! Enumeration of curve classes on del Pezzo surfaces.
//!
//! Three families of classes are enumerated on the blow-up `Z_d` of
//! `p = 9 - d` general points, each cut out by a pair of Diophantine
//! equations in the coefficients of `D = ℓL - Σ a_i E_i`:
//!
//! * (-1)-classes: `D² = -1`, `D·K = -1`, i.e. `Σa_i² = ℓ² + 1` and
//!   `Σa_i = 3ℓ - 1`;
//! * conic classes: `D² = 0`, `D·K = -2` and `D` nef, i.e. `Σa_i² = ℓ²`,
//!   `Σa_i = 3ℓ - 2`;
//! * roots: `α² = -2`, `α·K = 0`, i.e. `Σa_i² = ℓ² + 2`, `Σa_i = 3ℓ`.
//!
//! The search loops over `ℓ` inside the Cauchy–Schwarz window
//! `(Σa_i)² ≤ p·Σa_i²` and assigns coefficients in descending order,
//! pruning any partial assignment whose residual (sum, sum-of-squares)
//! pair is infeasible. Each surviving multiset is expanded to all of its
//! distinct labelled permutations. A deliberately unpruned box scan lives
//! in [`naive`] as an independent completeness check.

use std::collections::HashSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::picard::{canonical_class, DivisorClass};

/// Which defining equations the members of an inventory satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    /// `D² = -1`, `D·K = -1`.
    MinusOne,
    /// `D² = 0`, `D·K = -2`, nef.
    Conic,
    /// `α² = -2`, `α·K = 0`.
    Root,
}

impl ClassKind {
    pub fn label(self) -> &'static str {
        match self {
            ClassKind::MinusOne => "minus_one",
            ClassKind::Conic => "conic",
            ClassKind::Root => "root",
        }
    }
}

/// A complete, duplicate-free, canonically ordered list of classes of one
/// kind on one surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInventory {
    pub degree: i64,
    pub kind: ClassKind,
    pub classes: Vec<DivisorClass>,
}

impl Serialize for ClassInventory {
    /// The frozen shape `{"degree", "kind", "count", "classes"}` with
    /// classes as compact strings.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("ClassInventory", 4)?;
        state.serialize_field("degree", &self.degree)?;
        state.serialize_field("kind", self.kind.label())?;
        state.serialize_field("count", &(self.classes.len() as u64))?;
        state.serialize_field("classes", &self.classes)?;
        state.end()
    }
}

impl ClassInventory {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

fn check_degree(degree: i64, max: i64) -> Result<usize> {
    if degree < 1 || degree > max {
        let reason = if max == 8 {
            "expected 1..=8"
        } else {
            "expected 1..=9"
        };
        return Err(Error::InvalidDegree { degree, reason });
    }
    Ok((9 - degree) as usize)
}

fn isqrt(n: i64) -> i64 {
    debug_assert!(n >= 0);
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Integer window of `ℓ` values satisfying `(3ℓ - t)² ≤ p(ℓ² + s)`, the
/// Cauchy–Schwarz feasibility bound for `Σa = 3ℓ - t`, `Σa² = ℓ² + s`.
fn ell_window(p: usize, t: i64, s: i64) -> Vec<i64> {
    // |ℓ| ≤ 3t + 3√(p·s) + 9 comfortably covers the roots of the quadratic
    // (9-p)ℓ² - 6tℓ + (t² - ps) for p ≤ 8; scan and keep the exact interval.
    let p_i = p as i64;
    (-64..=64)
        .filter(|&ell| {
            let lhs = (3 * ell - t) * (3 * ell - t);
            lhs <= p_i * (ell * ell + s)
        })
        .collect()
}

/// All descending integer tuples of length `slots` with the given sum and
/// sum of squares. Coefficients may be negative.
fn descending_solutions(slots: usize, sum: i64, sum_sq: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if sum_sq < 0 {
        return out;
    }
    let mut prefix = Vec::with_capacity(slots);
    let cap = isqrt(sum_sq);
    descend(slots, cap, sum, sum_sq, &mut prefix, &mut out);
    out
}

fn descend(
    slots: usize,
    max_value: i64,
    rem_sum: i64,
    rem_sq: i64,
    prefix: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if slots == 0 {
        if rem_sum == 0 && rem_sq == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let left = (slots - 1) as i64;
    let bound = isqrt(rem_sq);
    let hi = max_value.min(bound);
    let lo = -bound;
    for v in (lo..=hi).rev() {
        let rs = rem_sum - v;
        let rq = rem_sq - v * v;
        // remaining entries are all ≤ v
        if rs > left * v {
            continue;
        }
        // residual Cauchy–Schwarz: rs² ≤ (slots-1)·rq
        if rs * rs > left * rq {
            continue;
        }
        prefix.push(v);
        descend(slots - 1, v, rs, rq, prefix, out);
        prefix.pop();
    }
}

/// Calls `emit` on every distinct permutation of `values` (any input order).
fn for_each_distinct_permutation(values: &[i64], mut emit: impl FnMut(&[i64])) {
    let mut v = values.to_vec();
    v.sort_unstable();
    loop {
        emit(&v);
        // next lexicographic permutation
        let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            break;
        };
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("successor exists");
        v.swap(i, j);
        v[i + 1..].reverse();
    }
}

/// Solutions of `Σa² = ℓ² + sq_offset`, `Σa = 3ℓ - sum_offset` for one `ℓ`,
/// as labelled coefficient tuples.
fn solutions_for_ell(p: usize, ell: i64, sum_offset: i64, sq_offset: i64) -> Vec<DivisorClass> {
    let sum = 3 * ell - sum_offset;
    let sum_sq = ell * ell + sq_offset;
    let mut classes = Vec::new();
    for multiset in descending_solutions(p, sum, sum_sq) {
        for_each_distinct_permutation(&multiset, |coeffs| {
            classes.push(DivisorClass::new(ell, coeffs.to_vec()));
        });
    }
    classes
}

fn enumerate(p: usize, sum_offset: i64, sq_offset: i64) -> Vec<DivisorClass> {
    let mut classes: Vec<DivisorClass> = ell_window(p, sum_offset, sq_offset)
        .into_par_iter()
        .map(|ell| solutions_for_ell(p, ell, sum_offset, sq_offset))
        .reduce(Vec::new, |mut acc, mut chunk| {
            acc.append(&mut chunk);
            acc
        });
    classes.sort();
    classes
}

/// The (-1)-classes on `Z_degree`, for `degree` in 1..=8.
///
/// Degree 9 is rejected rather than returning an empty list: the plane has
/// no exceptional curves and callers must treat it separately.
pub fn enumerate_minus_one_classes(degree: i64) -> Result<ClassInventory> {
    let p = check_degree(degree, 8)?;
    Ok(ClassInventory {
        degree,
        kind: ClassKind::MinusOne,
        classes: enumerate(p, 1, 1),
    })
}

/// The nef conic classes on `Z_degree`, for `degree` in 1..=9.
///
/// Degree 9 yields the empty inventory: `Σa = 3ℓ - 2` has no solution in an
/// empty coefficient list, so the plane carries no conic bundle — and the
/// covering K3 surface no elliptic fibration.
pub fn enumerate_conic_classes(degree: i64) -> Result<ClassInventory> {
    let p = check_degree(degree, 9)?;
    let classes = enumerate(p, 2, 0)
        .into_iter()
        .filter(|class| is_nef(class, degree).expect("arity matches degree"))
        .collect();
    Ok(ClassInventory {
        degree,
        kind: ClassKind::Conic,
        classes,
    })
}

/// The roots `α² = -2`, `α·K = 0` on `Z_degree`, for `degree` in 1..=8.
/// The result is closed under negation.
pub fn enumerate_roots(degree: i64) -> Result<ClassInventory> {
    let p = check_degree(degree, 8)?;
    Ok(ClassInventory {
        degree,
        kind: ClassKind::Root,
        classes: enumerate(p, 0, 2),
    })
}

/// Cached (-1)-inventories for degrees 1..=8 (index `degree - 1`).
static MINUS_ONE_CACHE: [OnceLock<Vec<DivisorClass>>; 8] =
    [const { OnceLock::new() }; 8];

pub(crate) fn minus_one_classes_cached(degree: i64) -> &'static [DivisorClass] {
    debug_assert!((1..=8).contains(&degree));
    MINUS_ONE_CACHE[(degree - 1) as usize].get_or_init(|| {
        enumerate_minus_one_classes(degree)
            .expect("degree validated")
            .classes
    })
}

/// Nef test against the generators of the effective cone.
///
/// For degree ≤ 7 the cone is generated by the (-1)-classes; for degree 8
/// by `{E_1, L - E_1}`; for degree 9 by `L` alone.
pub fn is_nef(class: &DivisorClass, degree: i64) -> Result<bool> {
    let p = check_degree(degree, 9)?;
    if class.num_points() != p {
        return Err(Error::ArityMismatch {
            left: class.num_points(),
            right: p,
        });
    }
    match degree {
        9 => Ok(class.ell() >= 0),
        8 => {
            let e1 = DivisorClass::exceptional(1, 1).expect("index in range");
            let fiber = DivisorClass::new(1, vec![1]);
            Ok(class.intersect(&e1)? >= 0 && class.intersect(&fiber)? >= 0)
        }
        _ => {
            let generators = minus_one_classes_cached(degree);
            for gen in generators {
                if class.intersect(gen)? < 0 {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn require_conic(class: &DivisorClass, degree: i64) -> Result<()> {
    let p = check_degree(degree, 9)?;
    if class.num_points() != p {
        return Err(Error::ArityMismatch {
            left: class.num_points(),
            right: p,
        });
    }
    let k = canonical_class(p)?;
    let is_conic = class.self_intersection() == 0
        && class.intersect(&k)? == -2
        && is_nef(class, degree)?;
    if is_conic {
        Ok(())
    } else {
        Err(Error::NotConicClass {
            class: class.to_string(),
            degree,
        })
    }
}

/// The splittings of a conic class into pairs of (-1)-classes.
///
/// Each singular fiber of the conic bundle is a pair `{A, B}` of
/// (-1)-classes with `A + B = conic` meeting transversally (`A·B = 1`);
/// there are exactly `8 - degree` of them. Pairs are returned with
/// `A < B` in canonical order, sorted.
pub fn reducible_fiber_pairs(
    conic: &DivisorClass,
    degree: i64,
) -> Result<Vec<(DivisorClass, DivisorClass)>> {
    // degree 9 never reaches here: its conic inventory is empty, so no
    // class passes the membership check
    require_conic(conic, degree)?;
    let minus_one = minus_one_classes_cached(degree);
    let lookup: HashSet<&DivisorClass> = minus_one.iter().collect();
    let mut pairs = Vec::new();
    for a in minus_one {
        let b = conic.sub(a)?;
        if *a < b && lookup.contains(&b) {
            debug_assert_eq!(a.intersect(&b)?, 1);
            pairs.push((a.clone(), b));
        }
    }
    pairs.sort();
    Ok(pairs)
}

/// The (-1)-classes meeting the conic class once.
///
/// Each such class pulls back to a bisection of the induced elliptic
/// fibration on the covering K3 surface: the general fiber `F` satisfies
/// `F·π*(E) = 2·(Γ·E) = 2`.
pub fn bisection_classes(conic: &DivisorClass, degree: i64) -> Result<ClassInventory> {
    require_conic(conic, degree)?;
    let classes = minus_one_classes_cached(degree)
        .iter()
        .filter(|e| e.intersect(conic).expect("same arity") == 1)
        .cloned()
        .collect();
    Ok(ClassInventory {
        degree,
        kind: ClassKind::MinusOne,
        classes,
    })
}

/// One representative per orbit of the symmetric group permuting the
/// coefficients, with the orbit size. The representative is the unique
/// member whose coefficients are sorted descending; representatives are
/// returned in canonical order and orbit sizes sum to the inventory size.
pub fn symmetry_representatives(inventory: &ClassInventory) -> Vec<(DivisorClass, usize)> {
    let mut counts: std::collections::BTreeMap<DivisorClass, usize> = Default::default();
    for class in &inventory.classes {
        *counts.entry(class.sorted_descending()).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

pub mod naive {
    //! Unpruned full-box reference scan.
    //!
    //! Iterates every `ℓ` in a fixed window and every coefficient tuple with
    //! `|a_i| ≤ |ℓ| + 1`, keeping the tuples that satisfy the defining
    //! equations verbatim. Shares nothing with the pruned search above; it
    //! exists so the two can be compared on small degrees.

    use super::*;

    const ELL_BOX: i64 = 16;

    fn box_scan(p: usize, keep: impl Fn(&DivisorClass) -> bool) -> Vec<DivisorClass> {
        let mut found = Vec::new();
        for ell in -ELL_BOX..=ELL_BOX {
            let bound = ell.abs() + 1;
            let mut coeffs = vec![-bound; p];
            loop {
                let class = DivisorClass::new(ell, coeffs.clone());
                if keep(&class) {
                    found.push(class);
                }
                // odometer increment over the box [-bound, bound]^p
                let mut carry = true;
                for slot in coeffs.iter_mut() {
                    if *slot < bound {
                        *slot += 1;
                        carry = false;
                        break;
                    }
                    *slot = -bound;
                }
                if carry {
                    break;
                }
            }
        }
        found.sort();
        found
    }

    /// Reference (-1)-class scan.
    pub fn minus_one_classes(degree: i64) -> Result<ClassInventory> {
        let p = check_degree(degree, 8)?;
        let k = canonical_class(p)?;
        let classes = box_scan(p, |class| {
            class.self_intersection() == -1 && class.intersect(&k).expect("same arity") == -1
        });
        Ok(ClassInventory {
            degree,
            kind: ClassKind::MinusOne,
            classes,
        })
    }

    /// Reference conic-class scan.
    pub fn conic_classes(degree: i64) -> Result<ClassInventory> {
        let p = check_degree(degree, 9)?;
        let k = canonical_class(p)?;
        let classes = box_scan(p, |class| {
            class.self_intersection() == 0
                && class.intersect(&k).expect("same arity") == -2
                && is_nef(class, degree).expect("arity matches")
        });
        Ok(ClassInventory {
            degree,
            kind: ClassKind::Conic,
            classes,
        })
    }

    /// Reference root scan.
    pub fn roots(degree: i64) -> Result<ClassInventory> {
        let p = check_degree(degree, 8)?;
        let k = canonical_class(p)?;
        let classes = box_scan(p, |class| {
            class.self_intersection() == -2 && class.intersect(&k).expect("same arity") == 0
        });
        Ok(ClassInventory {
            degree,
            kind: ClassKind::Root,
            classes,
        })
    }
}
