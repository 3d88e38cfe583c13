//! Reference catalog of conic-class families, kept exactly as originally
//! tabulated.
//!
//! Each entry records one family of conic classes on `Z_d` up to
//! permutation of the blown-up points: the `L`-coefficient and the
//! multiset of `E`-coefficients, e.g. `2L - Σ_{j∈J} E_j, |J| = 4` is
//! `(ell = 2, signature = [(1, 4)])`. The verifier matches every entry
//! against the orbits of the enumerated inventory and flags entries that
//! match nothing instead of correcting them — two degree-1 entries are
//! recorded with constraints that are unsatisfiable or violate the conic
//! equations, and they are retained verbatim so the discrepancy stays
//! visible.

use crate::curves::{symmetry_representatives, ClassInventory};
use crate::picard::DivisorClass;

/// One catalog family: coefficient `ell` of `L` plus positive
/// `E`-coefficient multiplicities, descending.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogRow {
    pub degree: i64,
    pub ell: i64,
    /// `(coefficient, multiplicity)` pairs; `None` when the recorded
    /// constraints contradict each other and denote no class at all.
    pub signature: Option<&'static [(i64, usize)]>,
    pub label: &'static str,
}

impl CatalogRow {
    /// The descending coefficient vector on `p` points, padded with zeros;
    /// `None` for unsatisfiable entries or entries that need more than `p`
    /// coefficients.
    pub fn descending_class(&self, num_points: usize) -> Option<DivisorClass> {
        let signature = self.signature?;
        let used: usize = signature.iter().map(|&(_, m)| m).sum();
        if used > num_points {
            return None;
        }
        let mut coeffs = Vec::with_capacity(num_points);
        for &(value, multiplicity) in signature {
            coeffs.extend(std::iter::repeat_n(value, multiplicity));
        }
        coeffs.resize(num_points, 0);
        Some(DivisorClass::new(self.ell, coeffs))
    }

    /// Number of labelled classes in the family: the multinomial
    /// `p! / (Π m_i! · z!)` over the coefficient multiplicities.
    pub fn family_size(&self, num_points: usize) -> Option<usize> {
        let signature = self.signature?;
        let used: usize = signature.iter().map(|&(_, m)| m).sum();
        if used > num_points {
            return None;
        }
        let mut size = factorial(num_points);
        for &(_, multiplicity) in signature {
            size /= factorial(multiplicity);
        }
        size /= factorial(num_points - used);
        Some(size)
    }
}

fn factorial(n: usize) -> usize {
    (2..=n).product::<usize>().max(1)
}

/// The catalog families for one degree, in increasing `ell`.
pub fn rows(degree: i64) -> &'static [CatalogRow] {
    macro_rules! row {
        ($d:expr, $ell:expr, $sig:expr, $label:expr) => {
            CatalogRow { degree: $d, ell: $ell, signature: Some(&$sig), label: $label }
        };
    }
    match degree {
        8 => &[row!(8, 1, [(1, 1)], "L-E_1")],
        7 => &[row!(7, 1, [(1, 1)], "L-E_i, i=1,2")],
        6 => &[row!(6, 1, [(1, 1)], "L-E_i, i=1,2,3")],
        5 => &[
            row!(5, 1, [(1, 1)], "L-E_i, i=1..4"),
            row!(5, 2, [(1, 4)], "2L-E_1-E_2-E_3-E_4"),
        ],
        4 => &[
            row!(4, 1, [(1, 1)], "L-E_i, i=1..5"),
            row!(4, 2, [(1, 4)], "2L-E_J, |J|=4"),
        ],
        3 => &[
            row!(3, 1, [(1, 1)], "L-E_i, i=1..6"),
            row!(3, 2, [(1, 4)], "2L-E_J, |J|=4"),
            row!(3, 3, [(2, 1), (1, 5)], "3L-2E_i-E_J, J complement of i"),
        ],
        2 => &[
            row!(2, 1, [(1, 1)], "L-E_i, i=1..7"),
            row!(2, 2, [(1, 4)], "2L-E_J, |J|=4"),
            row!(2, 3, [(2, 1), (1, 5)], "3L-2E_i-E_J, |J|=5"),
            row!(2, 4, [(2, 3), (1, 4)], "4L-2E_J-E_K, |J|=3, |K|=4"),
            row!(2, 5, [(2, 6), (1, 1)], "5L-E_i-2E_J, J complement of i"),
        ],
        1 => &[
            row!(1, 1, [(1, 1)], "L-E_i, i=1..8"),
            row!(1, 2, [(1, 4)], "2L-E_J, |J|=4"),
            // recorded with J both equal to the 7-element complement of {i}
            // and of size 5: unsatisfiable as stated
            CatalogRow {
                degree: 1,
                ell: 3,
                signature: None,
                label: "3L-2E_i-E_J, J complement of i and |J|=5 (contradictory)",
            },
            // recorded with |J|=4 twos and |K|=3 ones: violates D^2=0, D.K=-2
            row!(1, 4, [(2, 4), (1, 3)], "4L-2E_J-E_K, |J|=4, |K|=3"),
            row!(1, 4, [(3, 1), (1, 7)], "4L-3E_i-E_J, J complement of i"),
            row!(1, 5, [(3, 1), (2, 3), (1, 4)], "5L-3E_i-2E_J-E_K, |J|=3, |K|=4"),
            row!(1, 5, [(2, 6), (1, 1)], "5L-E_i-2E_J, |J|=6"),
            row!(1, 6, [(3, 2), (2, 4), (1, 2)], "6L-3E_J-2E_K-E_R, |J|=2, |K|=4, |R|=2"),
            row!(1, 7, [(4, 1), (3, 1), (2, 6)], "7L-4E_i-3E_j-2E_K, K complement of {i,j}"),
            row!(1, 7, [(3, 4), (2, 3), (1, 1)], "7L-E_i-2E_J-3E_K, |J|=3, |K|=4"),
            row!(1, 8, [(4, 1), (3, 4), (2, 3)], "8L-4E_i-2E_J-3E_K, |J|=3, |K|=4"),
            row!(1, 8, [(3, 7), (1, 1)], "8L-E_i-3E_J, J complement of i"),
            row!(1, 9, [(4, 2), (3, 5), (2, 1)], "9L-2E_i-4E_J-3E_K, |J|=2, |K|=5"),
            row!(1, 10, [(4, 4), (3, 4)], "10L-3E_I-4E_J, |I|=|J|=4"),
            row!(1, 11, [(4, 7), (3, 1)], "11L-3E_i-4E_J, J complement of i"),
        ],
        _ => &[],
    }
}

/// Result of matching the enumerated conic orbits against the catalog.
#[derive(Debug, Clone)]
pub struct MatchReport {
    pub degree: i64,
    /// Each enumerated orbit (representative, size) with the index of the
    /// catalog row it realizes, if any.
    pub orbits: Vec<(DivisorClass, usize, Option<usize>)>,
    /// Indices of catalog rows matched by no orbit.
    pub unmatched_rows: Vec<usize>,
    /// Matched rows whose recorded family size disagrees with the orbit.
    pub size_mismatches: Vec<usize>,
}

impl MatchReport {
    pub fn is_one_to_one(&self) -> bool {
        self.unmatched_rows.is_empty()
            && self.size_mismatches.is_empty()
            && self.orbits.iter().all(|(_, _, row)| row.is_some())
    }
}

/// Matches the orbits of a conic inventory against the catalog of its
/// degree. Orbits are compared by descending representative; a matched
/// row must also predict the exact orbit size.
pub fn match_inventory(inventory: &ClassInventory) -> MatchReport {
    let degree = inventory.degree;
    let num_points = (9 - degree) as usize;
    let table = rows(degree);
    let mut orbits = Vec::new();
    let mut used = vec![false; table.len()];
    for (representative, orbit_size) in symmetry_representatives(inventory) {
        let matched = table.iter().enumerate().position(|(index, row)| {
            !used[index]
                && row.descending_class(num_points).as_ref() == Some(&representative)
        });
        if let Some(index) = matched {
            used[index] = true;
        }
        orbits.push((representative, orbit_size, matched));
    }
    let mut size_mismatches = Vec::new();
    for (_, orbit_size, matched) in &orbits {
        if let Some(index) = matched {
            if table[*index].family_size(num_points) != Some(*orbit_size) {
                size_mismatches.push(*index);
            }
        }
    }
    let unmatched_rows = (0..table.len()).filter(|&i| !used[i]).collect();
    MatchReport { degree, orbits, unmatched_rows, size_mismatches }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::enumerate_conic_classes;

    #[test]
    fn catalog_matches_enumeration_one_for_one_above_degree_one() {
        for degree in 2..=8 {
            let inventory = enumerate_conic_classes(degree).unwrap();
            let report = match_inventory(&inventory);
            assert!(report.is_one_to_one(), "degree {degree}: {report:?}");
            assert_eq!(report.orbits.len(), rows(degree).len());
        }
    }

    #[test]
    fn degree_one_flags_exactly_the_two_defective_rows() {
        let inventory = enumerate_conic_classes(1).unwrap();
        let report = match_inventory(&inventory);
        // rows 2 and 3 (0-based): the contradictory 3L entry and the
        // equation-violating 4L entry
        assert_eq!(report.unmatched_rows, vec![2, 3]);
        assert!(report.size_mismatches.is_empty());
        let unmatched_orbits: Vec<_> = report
            .orbits
            .iter()
            .filter(|(_, _, row)| row.is_none())
            .map(|(rep, size, _)| (rep.to_string(), *size))
            .collect();
        assert_eq!(
            unmatched_orbits,
            vec![
                ("(3;2,1,1,1,1,1,0,0)".to_string(), 168),
                ("(4;2,2,2,1,1,1,1,0)".to_string(), 280),
            ]
        );
    }

    #[test]
    fn family_sizes_sum_to_inventory_counts_when_consistent() {
        for degree in 2..=8 {
            let p = (9 - degree) as usize;
            let total: usize = rows(degree)
                .iter()
                .map(|row| row.family_size(p).unwrap())
                .sum();
            let inventory = enumerate_conic_classes(degree).unwrap();
            assert_eq!(total, inventory.len(), "degree {degree}");
        }
    }

    #[test]
    fn defective_rows_denote_nothing_or_fail_the_equations() {
        let table = rows(1);
        assert!(table[2].signature.is_none());
        assert!(table[2].descending_class(8).is_none());
        let bad = table[3].descending_class(8).unwrap();
        // D^2 = 0 fails: 16 - (4*4 + 3) = -3
        assert_eq!(bad.self_intersection(), -3);
    }
}
