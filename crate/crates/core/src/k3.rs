//! The del Pezzo ↔ K3 correspondence at the invariant level.
//!
//! A strictly elliptic K3 surface double-covers a degree-`d` del Pezzo
//! surface branched over a smooth curve in `|-2K|`; the cover of a conic
//! bundle is an elliptic fibration, and the Kodaira type of each fiber is
//! read off from how the branch curve meets the conic fiber. Over a smooth
//! fiber the branch cuts out four points with multiplicity (a partition of
//! 4); over a reducible fiber `F_1 + F_2` each component carries total
//! branch multiplicity two and five cases arise.
//!
//! The numerical invariants are rigid along the family: rank and length of
//! the invariant lattice agree (`r = a = 10 - d`), the fixed curve has
//! genus `g = d + 1`, no rational curves are fixed, and fiber
//! configurations must sum their Euler numbers to 24 with exactly `8 - d`
//! fibers over the reducible locus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Kodaira label of an elliptic-fibration fiber occurring here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KodairaType {
    /// `I_0` is the smooth fiber; `I_n` a cycle of `n` rational curves.
    I(u32),
    II,
    III,
    IV,
}

impl KodairaType {
    /// Euler number: `n` for `I_n`, 2 for `II`, 3 for `III`, 4 for `IV`.
    pub fn euler_number(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "II" => Ok(KodairaType::II),
            "III" => Ok(KodairaType::III),
            "IV" => Ok(KodairaType::IV),
            _ => s
                .strip_prefix('I')
                .and_then(|n| n.parse().ok())
                .map(KodairaType::I)
                .ok_or_else(|| Error::InvalidPattern(format!("unknown fiber type '{s}'"))),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// How the branch curve meets a reducible conic-bundle fiber
/// `F_1 + F_2`, `P = F_1 ∩ F_2`. Each component carries total branch
/// multiplicity two; the five possibilities are encoded directly so no
/// illegal pattern is representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReducibleCase {
    /// Two simple points on each component, none at `P`.
    Transverse,
    /// A double point on one component, two simple points on the other,
    /// none at `P`.
    OneTangent,
    /// A double point on each component, none at `P`.
    TwoTangent,
    /// `P` lies on the branch curve, simple on both components.
    NodeOnBranchTransverse,
    /// The branch meets one component at `P` with multiplicity 2 and the
    /// other in two simple points away from `P`.
    NodeOnBranchTangent,
}

impl ReducibleCase {
    pub const ALL: [ReducibleCase; 5] = [
        ReducibleCase::Transverse,
        ReducibleCase::OneTangent,
        ReducibleCase::TwoTangent,
        ReducibleCase::NodeOnBranchTransverse,
        ReducibleCase::NodeOnBranchTangent,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ReducibleCase::Transverse => "transverse",
            ReducibleCase::OneTangent => "one-tangent",
            ReducibleCase::TwoTangent => "two-tangent",
            ReducibleCase::NodeOnBranchTransverse => "node-on-branch-transverse",
            ReducibleCase::NodeOnBranchTangent => "node-on-branch-tangent",
        }
    }
}

impl FromStr for ReducibleCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReducibleCase::ALL
            .into_iter()
            .find(|case| case.token() == s)
            .ok_or_else(|| Error::InvalidPattern(format!("unknown reducible case '{s}'")))
    }
}

/// Intersection pattern of the branch curve with one conic-bundle fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberPattern {
    /// Multiplicities on a smooth fiber; always a partition of 4.
    Smooth(Vec<u32>),
    Reducible(ReducibleCase),
}

impl FiberPattern {
    /// Validates that the multiplicities form a partition of 4.
    pub fn smooth(multiplicities: Vec<u32>) -> Result<Self> {
        validate_partition(&multiplicities)?;
        let mut sorted = multiplicities;
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        Ok(FiberPattern::Smooth(sorted))
    }

    pub fn reducible(case: ReducibleCase) -> Self {
        FiberPattern::Reducible(case)
    }

    /// Kodaira type of the covering fiber.
    pub fn classify(&self) -> KodairaType {
        match self {
            FiberPattern::Smooth(partition) => {
                classify_smooth_fiber(partition).expect("validated at construction")
            }
            FiberPattern::Reducible(case) => classify_reducible_fiber(*case),
        }
    }
}

fn validate_partition(multiplicities: &[u32]) -> Result<()> {
    if multiplicities.contains(&0) {
        return Err(Error::InvalidPattern(
            "multiplicities must be positive".into(),
        ));
    }
    let total: u32 = multiplicities.iter().sum();
    if total != 4 {
        return Err(Error::InvalidPattern(format!(
            "branch multiplicities on a smooth fiber must sum to 4, got {total}"
        )));
    }
    Ok(())
}

/// Kodaira type over a smooth conic fiber from the branch multiplicities:
/// `[1,1,1,1] → I_0`, `[2,1,1] → I_1`, `[2,2] → I_2`, `[3,1] → II`,
/// `[4] → III`.
pub fn classify_smooth_fiber(multiplicities: &[u32]) -> Result<KodairaType> {
    validate_partition(multiplicities)?;
    let mut sorted = multiplicities.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Ok(match sorted.as_slice() {
        [1, 1, 1, 1] => KodairaType::I(0),
        [2, 1, 1] => KodairaType::I(1),
        [2, 2] => KodairaType::I(2),
        [3, 1] => KodairaType::II,
        [4] => KodairaType::III,
        _ => unreachable!("all partitions of 4 are covered"),
    })
}

/// Kodaira type over a reducible conic fiber; total on the five cases.
pub fn classify_reducible_fiber(case: ReducibleCase) -> KodairaType {
    match case {
        ReducibleCase::Transverse => KodairaType::I(2),
        ReducibleCase::OneTangent => KodairaType::I(3),
        ReducibleCase::TwoTangent => KodairaType::I(4),
        ReducibleCase::NodeOnBranchTransverse => KodairaType::III,
        ReducibleCase::NodeOnBranchTangent => KodairaType::IV,
    }
}

/// Base surface of the quotient del Pezzo surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseSurface {
    P2,
    P1xP1,
    #[serde(rename = "blow_up")]
    BlowUp(usize),
}

/// The strictly elliptic invariants attached to one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantRecord {
    pub degree: i64,
    pub delta: u8,
    pub ns_rank: usize,
    pub length: usize,
    pub genus: i64,
    pub rational_count: i64,
    pub base: BaseSurface,
    /// False exactly at degree 9, where the invariant lattice `⟨2⟩` has no
    /// nonzero isotropic classes.
    pub elliptic_fibrations: bool,
}

fn check_pair(degree: i64, delta: u8) -> Result<()> {
    if !(1..=9).contains(&degree) {
        return Err(Error::InvalidDegree { degree, reason: "expected 1..=9" });
    }
    if delta > 1 {
        return Err(Error::InvalidInvariants(format!("delta {delta} not in {{0,1}}")));
    }
    if delta == 0 && degree != 8 {
        return Err(Error::InvalidInvariants(format!(
            "delta = 0 requires degree 8 (quadric base), got degree {degree}"
        )));
    }
    Ok(())
}

/// All valid `(degree, delta)` pairs: `(d, 1)` for `d` in 1..=9 and `(8, 0)`.
pub fn valid_pairs() -> Vec<(i64, u8)> {
    let mut pairs: Vec<(i64, u8)> = (1..=9).map(|d| (d, 1)).collect();
    pairs.push((8, 0));
    pairs
}

/// The invariant record of the strictly elliptic K3 surface over the
/// degree-`degree` base: `r = a = 10 - d`, `g = d + 1`, `k = 0`.
pub fn invariants_of(degree: i64, delta: u8) -> Result<InvariantRecord> {
    check_pair(degree, delta)?;
    let ns_rank = (10 - degree) as usize;
    let base = if delta == 0 {
        BaseSurface::P1xP1
    } else if degree == 9 {
        BaseSurface::P2
    } else {
        BaseSurface::BlowUp((9 - degree) as usize)
    };
    let record = InvariantRecord {
        degree,
        delta,
        ns_rank,
        length: ns_rank,
        genus: degree + 1,
        rational_count: 0,
        base,
        elliptic_fibrations: degree <= 8,
    };
    debug_assert_eq!(
        (record.genus, record.rational_count),
        fixed_locus_from(record.ns_rank as i64, record.length as i64)?
    );
    Ok(record)
}

/// Fixed-locus topology from the lattice invariants:
/// `g = (22 - r - a)/2`, `k = (r - a)/2`.
pub fn fixed_locus_from(ns_rank: i64, length: i64) -> Result<(i64, i64)> {
    if (ns_rank - length) % 2 != 0 {
        return Err(Error::InvalidInvariants(format!(
            "r - a = {} must be even",
            ns_rank - length
        )));
    }
    let remainder = 22 - ns_rank - length;
    if remainder % 2 != 0 || remainder < 0 {
        return Err(Error::InvalidInvariants(format!(
            "22 - r - a = {remainder} must be even and non-negative"
        )));
    }
    Ok((remainder / 2, (ns_rank - length) / 2))
}

/// Admissible singular-fiber types for the fibration over degree `degree`:
/// degree 8 allows `{I_0, I_1, I_2, II, III}`, degrees 6 and 7 add `I_3`,
/// degree ≤ 5 allows all eight types.
pub fn admissible_types(degree: i64, delta: u8) -> Result<BTreeSet<KodairaType>> {
    if degree == 9 {
        return Err(Error::NoEllipticFibrations);
    }
    check_pair(degree, delta)?;
    let mut types: BTreeSet<KodairaType> = [
        KodairaType::I(0),
        KodairaType::I(1),
        KodairaType::I(2),
        KodairaType::II,
        KodairaType::III,
    ]
    .into_iter()
    .collect();
    if degree <= 7 {
        types.insert(KodairaType::I(3));
    }
    if degree <= 5 {
        types.insert(KodairaType::I(4));
        types.insert(KodairaType::IV);
    }
    Ok(types)
}

/// Classifies a pattern and rejects the result when the type is not
/// admissible at this degree.
pub fn classify_for_degree(
    pattern: &FiberPattern,
    degree: i64,
    delta: u8,
) -> Result<KodairaType> {
    let fiber = pattern.classify();
    let admissible = admissible_types(degree, delta)?;
    if admissible.contains(&fiber) {
        Ok(fiber)
    } else {
        Err(Error::InvalidPattern(format!(
            "fiber type {fiber} is not admissible at degree {degree}"
        )))
    }
}

/// Types a reducible conic fiber can cover.
const REDUCIBLE_LOCUS: [KodairaType; 5] = [
    KodairaType::I(2),
    KodairaType::I(3),
    KodairaType::I(4),
    KodairaType::III,
    KodairaType::IV,
];

/// Singular types a smooth conic fiber can cover.
const SMOOTH_LOCUS: [KodairaType; 4] = [
    KodairaType::I(1),
    KodairaType::I(2),
    KodairaType::II,
    KodairaType::III,
];

/// A candidate fiber configuration satisfying the necessary numeric
/// conditions: Euler numbers sum to 24, exactly `8 - d` fibers sit over
/// the reducible locus, and every type is admissible for the degree. No
/// geometric realizability is claimed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FiberConfiguration {
    pub degree: i64,
    pub delta: u8,
    /// Fibers over the `8 - d` reducible conic fibers, as type counts.
    #[serde(rename = "reducible")]
    pub reducible_fibers: BTreeMap<KodairaType, usize>,
    /// Singular fibers over the smooth locus, as type counts.
    #[serde(rename = "smooth")]
    pub smooth_locus_fibers: BTreeMap<KodairaType, usize>,
}

impl FiberConfiguration {
    /// Validates every configuration invariant.
    pub fn new(
        degree: i64,
        delta: u8,
        reducible_fibers: BTreeMap<KodairaType, usize>,
        smooth_locus_fibers: BTreeMap<KodairaType, usize>,
    ) -> Result<Self> {
        if degree == 9 {
            return Err(Error::NoEllipticFibrations);
        }
        check_pair(degree, delta)?;
        let admissible = admissible_types(degree, delta)?;
        let reducible_count: usize = reducible_fibers.values().sum();
        if reducible_count != (8 - degree) as usize {
            return Err(Error::InvalidPattern(format!(
                "expected {} fibers over the reducible locus, got {reducible_count}",
                8 - degree
            )));
        }
        for fiber in reducible_fibers.keys() {
            if !REDUCIBLE_LOCUS.contains(fiber) {
                return Err(Error::InvalidPattern(format!(
                    "{fiber} cannot lie over a reducible conic fiber"
                )));
            }
            if !admissible.contains(fiber) {
                return Err(Error::InvalidPattern(format!(
                    "{fiber} is not admissible at degree {degree}"
                )));
            }
        }
        for fiber in smooth_locus_fibers.keys() {
            if !SMOOTH_LOCUS.contains(fiber) {
                return Err(Error::InvalidPattern(format!(
                    "{fiber} cannot lie over a smooth conic fiber"
                )));
            }
        }
        let config = Self { degree, delta, reducible_fibers, smooth_locus_fibers };
        if config.euler_total() != 24 {
            return Err(Error::InvalidPattern(format!(
                "Euler numbers sum to {}, expected 24",
                config.euler_total()
            )));
        }
        Ok(config)
    }

    /// Sum of Euler numbers over both loci.
    pub fn euler_total(&self) -> u32 {
        self.reducible_fibers
            .iter()
            .chain(&self.smooth_locus_fibers)
            .map(|(fiber, &count)| fiber.euler_number() * count as u32)
            .sum()
    }
}

/// Every candidate configuration for `(degree, delta)`, in lexicographic
/// order on the type-count maps.
pub fn enumerate_fiber_configurations(
    degree: i64,
    delta: u8,
) -> Result<Vec<FiberConfiguration>> {
    if degree == 9 {
        return Err(Error::NoEllipticFibrations);
    }
    check_pair(degree, delta)?;
    let admissible = admissible_types(degree, delta)?;
    let reducible_pool: Vec<KodairaType> = REDUCIBLE_LOCUS
        .into_iter()
        .filter(|fiber| admissible.contains(fiber))
        .collect();
    let slots = (8 - degree) as usize;
    let mut configs = Vec::new();
    let mut multiset = Vec::new();
    fill_reducible(
        degree,
        delta,
        &reducible_pool,
        0,
        slots,
        &mut multiset,
        &mut configs,
    );
    configs.sort();
    Ok(configs)
}

fn fill_reducible(
    degree: i64,
    delta: u8,
    pool: &[KodairaType],
    from: usize,
    slots: usize,
    chosen: &mut Vec<KodairaType>,
    out: &mut Vec<FiberConfiguration>,
) {
    if slots == 0 {
        let reducible: BTreeMap<KodairaType, usize> =
            chosen.iter().fold(BTreeMap::new(), |mut acc, fiber| {
                *acc.entry(*fiber).or_insert(0) += 1;
                acc
            });
        let used: u32 = reducible
            .iter()
            .map(|(fiber, &count)| fiber.euler_number() * count as u32)
            .sum();
        if used > 24 {
            return;
        }
        for smooth in smooth_fillings(24 - used) {
            let config = FiberConfiguration::new(degree, delta, reducible.clone(), smooth)
                .expect("constructed within the invariants");
            out.push(config);
        }
        return;
    }
    for (index, fiber) in pool.iter().enumerate().skip(from) {
        chosen.push(*fiber);
        fill_reducible(degree, delta, pool, index, slots - 1, chosen, out);
        chosen.pop();
    }
}

/// All count maps over `{I_1, I_2, II, III}` with Euler total `target`.
fn smooth_fillings(target: u32) -> Vec<BTreeMap<KodairaType, usize>> {
    let mut fillings = Vec::new();
    for three in 0..=target / 3 {
        let after_three = target - 3 * three;
        for two_cycle in 0..=after_three / 2 {
            let after_cycles = after_three - 2 * two_cycle;
            for cusp in 0..=after_cycles / 2 {
                let ones = after_cycles - 2 * cusp;
                let mut counts = BTreeMap::new();
                if ones > 0 {
                    counts.insert(KodairaType::I(1), ones as usize);
                }
                if two_cycle > 0 {
                    counts.insert(KodairaType::I(2), two_cycle as usize);
                }
                if cusp > 0 {
                    counts.insert(KodairaType::II, cusp as usize);
                }
                if three > 0 {
                    counts.insert(KodairaType::III, three as usize);
                }
                fillings.push(counts);
            }
        }
    }
    fillings
}
