//! Reflection-group machinery on the Picard lattice.
//!
//! The roots `α² = -2`, `α·K = 0` span the orthogonal complement of the
//! canonical class, and reflection in a root,
//!
//! ```text
//!     s_α(x) = x + (x·α)·α,
//! ```
//!
//! preserves the pairing and fixes `K`. Orbits under the simple reflections
//! reproduce the enumerated inventories and are used to cross-validate
//! them: for instance the orbit of `E_1` on the blow-up of six points is
//! exactly the 27 (-1)-classes of the cubic surface.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::picard::{DivisorClass, MAX_POINTS};

/// Safety bound for orbit sizes; comfortably above the 2160 conic classes
/// at degree 1, far below anything an isotropic misuse could generate.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// The simple roots used to generate reflections on the blow-up of
/// `num_points` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBasis {
    pub num_points: usize,
    pub roots: Vec<DivisorClass>,
}

/// Simple roots on the blow-up of `p` points:
/// `{L - E_1 - E_2 - E_3, E_1 - E_2, …, E_{p-1} - E_p}` for `p ≥ 3`,
/// `{E_1 - E_2}` for `p = 2`, empty for `p = 1`.
pub fn simple_roots(num_points: usize) -> Result<RootBasis> {
    if num_points == 0 || num_points > MAX_POINTS {
        return Err(Error::InvalidNumPoints { num_points });
    }
    let mut roots = Vec::new();
    if num_points >= 3 {
        let mut coeffs = vec![0; num_points];
        coeffs[0] = 1;
        coeffs[1] = 1;
        coeffs[2] = 1;
        roots.push(DivisorClass::new(1, coeffs));
    }
    for i in 0..num_points.saturating_sub(1) {
        // E_{i+1} - E_{i+2}: stored coefficients are negated
        let mut coeffs = vec![0; num_points];
        coeffs[i] = -1;
        coeffs[i + 1] = 1;
        roots.push(DivisorClass::new(0, coeffs));
    }
    Ok(RootBasis { num_points, roots })
}

/// Reflection `s_α(x) = x + (x·α)·α` in a root of square -2.
pub fn reflect(x: &DivisorClass, root: &DivisorClass) -> Result<DivisorClass> {
    let square = root.self_intersection();
    if square != -2 {
        return Err(Error::NotARoot { found: square });
    }
    let product = x.intersect(root)?;
    x.plus_scaled(product, root)
}

/// Breadth-first closure of `{x}` under reflection in all simple roots.
///
/// Fails with [`Error::OrbitOverflow`] once the orbit outgrows `cap`; use
/// [`DEFAULT_ORBIT_CAP`] unless a tighter bound is wanted. Classes on a
/// zero-point blow-up have no roots and yield the singleton orbit.
pub fn weyl_orbit(x: &DivisorClass, cap: usize) -> Result<BTreeSet<DivisorClass>> {
    let p = x.num_points();
    let basis = if p == 0 {
        Vec::new()
    } else {
        simple_roots(p)?.roots
    };
    let mut orbit: HashSet<DivisorClass> = HashSet::new();
    let mut sorted: BTreeSet<DivisorClass> = BTreeSet::new();
    let mut frontier = VecDeque::new();
    orbit.insert(x.clone());
    sorted.insert(x.clone());
    frontier.push_back(x.clone());
    while let Some(current) = frontier.pop_front() {
        for root in &basis {
            let image = reflect(&current, root)?;
            if orbit.insert(image.clone()) {
                if orbit.len() > cap {
                    return Err(Error::OrbitOverflow { cap });
                }
                sorted.insert(image.clone());
                frontier.push_back(image);
            }
        }
    }
    Ok(sorted)
}

/// Decomposes a list of classes into reflection orbits.
///
/// Folds [`weyl_orbit`] over unvisited members and reports, per orbit, its
/// least member and size. Whether an inventory forms a single orbit is
/// data, never an assumption.
pub fn orbit_decomposition(
    classes: &[DivisorClass],
    cap: usize,
) -> Result<Vec<(DivisorClass, usize)>> {
    let mut remaining: BTreeSet<&DivisorClass> = classes.iter().collect();
    let mut orbits = Vec::new();
    while let Some(seed) = remaining.iter().next().copied() {
        let orbit = weyl_orbit(seed, cap)?;
        let least = orbit.iter().next().expect("orbit contains its seed").clone();
        orbits.push((least, orbit.len()));
        for member in &orbit {
            remaining.remove(member);
        }
    }
    orbits.sort();
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{enumerate_conic_classes, enumerate_minus_one_classes, enumerate_roots};
    use crate::picard::{canonical_class, parse_class};

    fn cls(text: &str, p: usize) -> DivisorClass {
        parse_class(text, p).unwrap()
    }

    #[test]
    fn simple_roots_shapes() {
        assert!(simple_roots(1).unwrap().roots.is_empty());
        assert_eq!(simple_roots(2).unwrap().roots, vec![cls("(0;-1,1)", 2)]);
        for p in 3..=8 {
            let basis = simple_roots(p).unwrap();
            assert_eq!(basis.roots.len(), p);
            let k = canonical_class(p).unwrap();
            for root in &basis.roots {
                assert_eq!(root.self_intersection(), -2);
                assert_eq!(root.intersect(&k).unwrap(), 0);
            }
        }
        assert!(simple_roots(0).is_err());
        assert!(simple_roots(9).is_err());
    }

    #[test]
    fn basis_at_two_points_matches_exhaustive_roots() {
        let all = enumerate_roots(7).unwrap().classes;
        let basis = simple_roots(2).unwrap().roots;
        assert!(basis.iter().all(|r| all.contains(r)));
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn reflection_examples() {
        let e1 = cls("(0;-1,0)", 2);
        let swap = cls("(0;-1,1)", 2);
        assert_eq!(reflect(&e1, &swap).unwrap(), cls("(0;0,-1)", 2));

        let e1 = cls("(0;-1,0,0)", 3);
        let cubic_root = cls("(1;1,1,1)", 3);
        assert_eq!(reflect(&e1, &cubic_root).unwrap(), cls("(1;0,1,1)", 3));

        let k = canonical_class(5).unwrap();
        for root in simple_roots(5).unwrap().roots {
            assert_eq!(reflect(&k, &root).unwrap(), k);
        }
    }

    #[test]
    fn reflection_rejects_non_roots() {
        let e1 = cls("(0;-1,0)", 2);
        assert!(matches!(
            reflect(&e1, &e1),
            Err(Error::NotARoot { found: -1 })
        ));
    }

    #[test]
    fn reflection_is_involutive_and_isometric() {
        let roots = enumerate_roots(4).unwrap().classes;
        let classes = enumerate_minus_one_classes(4).unwrap().classes;
        for root in roots.iter().take(6) {
            for x in classes.iter().take(8) {
                let once = reflect(x, root).unwrap();
                assert_eq!(reflect(&once, root).unwrap(), *x);
                for y in classes.iter().take(8) {
                    let sy = reflect(y, root).unwrap();
                    assert_eq!(
                        once.intersect(&sy).unwrap(),
                        x.intersect(y).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn orbit_of_exceptional_class_is_minus_one_inventory() {
        let e1 = cls("(0;-1,0,0,0,0,0)", 6);
        let orbit = weyl_orbit(&e1, DEFAULT_ORBIT_CAP).unwrap();
        let inventory = enumerate_minus_one_classes(3).unwrap().classes;
        assert_eq!(orbit.len(), 27);
        assert_eq!(orbit.into_iter().collect::<Vec<_>>(), inventory);
    }

    #[test]
    fn orbit_of_ruling_is_conic_inventory() {
        let ruling = cls("(1;1,0,0,0)", 4);
        let orbit = weyl_orbit(&ruling, DEFAULT_ORBIT_CAP).unwrap();
        let inventory = enumerate_conic_classes(5).unwrap().classes;
        assert_eq!(orbit.into_iter().collect::<Vec<_>>(), inventory);
    }

    #[test]
    fn root_inventories_are_single_orbits_at_low_degree() {
        // degrees 3 and 1 carry irreducible simply-laced root systems, so
        // the orbit of one simple root is the whole inventory (72 and 240)
        for (degree, expected) in [(3i64, 72usize), (1, 240)] {
            let p = (9 - degree) as usize;
            let seed = simple_roots(p).unwrap().roots[1].clone();
            let orbit = weyl_orbit(&seed, DEFAULT_ORBIT_CAP).unwrap();
            let inventory = enumerate_roots(degree).unwrap().classes;
            assert_eq!(orbit.len(), expected);
            assert_eq!(orbit.into_iter().collect::<Vec<_>>(), inventory);
        }
    }

    #[test]
    fn canonical_class_is_fixed() {
        for p in 1..=8 {
            let k = canonical_class(p).unwrap();
            let orbit = weyl_orbit(&k, DEFAULT_ORBIT_CAP).unwrap();
            assert_eq!(orbit.len(), 1);
        }
    }

    #[test]
    fn zero_point_orbit_is_singleton() {
        let l = cls("(1;)", 0);
        assert_eq!(weyl_orbit(&l, DEFAULT_ORBIT_CAP).unwrap().len(), 1);
    }

    #[test]
    fn cap_overflow_is_reported() {
        let e1 = cls("(0;-1,0,0,0,0,0)", 6);
        assert!(matches!(
            weyl_orbit(&e1, 10),
            Err(Error::OrbitOverflow { cap: 10 })
        ));
    }

    #[test]
    fn inventories_are_closed_under_simple_reflections() {
        for degree in 1..=8 {
            let p = (9 - degree) as usize;
            let basis = simple_roots(p).unwrap().roots;
            let inventories = [
                enumerate_minus_one_classes(degree).unwrap().classes,
                enumerate_conic_classes(degree).unwrap().classes,
                enumerate_roots(degree).unwrap().classes,
            ];
            for classes in inventories {
                let set: std::collections::HashSet<_> = classes.iter().cloned().collect();
                for class in &classes {
                    for root in &basis {
                        assert!(set.contains(&reflect(class, root).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn conic_orbit_decomposition_is_reported_not_assumed() {
        // single orbit happens to hold for the small degrees; recorded as data
        for degree in [5, 6, 7] {
            let classes = enumerate_conic_classes(degree).unwrap().classes;
            let orbits = orbit_decomposition(&classes, DEFAULT_ORBIT_CAP).unwrap();
            let total: usize = orbits.iter().map(|(_, n)| n).sum();
            assert_eq!(total, classes.len());
        }
    }
}
