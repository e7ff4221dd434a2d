//! Cross-checks the path-cycle and graph-cycle decompositions of a landscape.
//!
//! Under the Metropolis seed the two families coincide, and for every cycle
//! `A`:
//!
//! - `H_e(A) = (min_{∂A} H − min_A H) ∨ 0`;
//! - `H_m(A) = max_A H − min_A H` when `|A| > 1`, `H_m(A) = H_e(A)` otherwise.
//!
//! [`verify_equivalence`] collects every violation instead of stopping at the
//! first one. [`brute_force_path_cycles`] is an exhaustive oracle over
//! bitmasks that shares no code with the sweep in [`crate::path_cycles`].

use std::collections::BTreeSet;

use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::graph_cycles::{run_decomposition, structural_violations, DecompositionTrace};
use crate::landscape::{Landscape, StateSet};
use crate::path_cycles::{enumerate_path_cycles, is_path_cycle};

/// Largest landscape the exhaustive oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityViolation {
    pub cycle: StateSet,
    pub reported: Energy,
    pub expected: Energy,
}

/// Per-iteration outcome of the four conditions checked on `E^n`:
///
/// - (I) every class is a path cycle;
/// - (II) for a class `A` with `|A| > 1` and a connected singleton class
///   `{a}`: `V^n(A,{a}) = H(a) − min_A H` and `V^n({a},A) = 0`;
/// - (III) `H_e^n(A) = (min_{∂A} H − min_A H) ∨ 0`;
/// - (IV) `H_m^n(A) = max_A H − min_A H` for classes `|A| > 1` created at
///   level `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionsEntry {
    pub iteration: usize,
    pub path_cycle: bool,
    pub singleton_costs: bool,
    pub exit_height: bool,
    pub merge_height: bool,
    pub failures: Vec<String>,
}

impl ConditionsEntry {
    pub fn passed(&self) -> bool {
        self.path_cycle && self.singleton_costs && self.exit_height && self.merge_height
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub set_equal: bool,
    pub path_cycle_count: usize,
    pub graph_cycle_count: usize,
    pub only_path_cycles: Vec<StateSet>,
    pub only_graph_cycles: Vec<StateSet>,
    pub he_identity_violations: Vec<IdentityViolation>,
    pub hm_identity_violations: Vec<IdentityViolation>,
    /// Non-singleton cycles where `H_m < H_e` fails.
    pub order_violations: Vec<StateSet>,
    /// Structural laws of the trace (partition, drop equation, ...).
    pub structural_violations: Vec<String>,
    pub conditions_log: Vec<ConditionsEntry>,
    pub notes: Vec<String>,
}

impl EquivalenceReport {
    pub fn is_clean(&self) -> bool {
        self.set_equal
            && self.he_identity_violations.is_empty()
            && self.hm_identity_violations.is_empty()
            && self.order_violations.is_empty()
            && self.structural_violations.is_empty()
            && self.conditions_log.iter().all(ConditionsEntry::passed)
    }
}

const TRANSPOSED_NOTE: &str = "checked H_e = Γ ∨ 0 and H_m = Γ̃; the transposed pairing \
H_m = Γ, H_e = Γ̃ is not an identity and is not tested";

pub fn verify_equivalence(landscape: &Landscape) -> Result<EquivalenceReport> {
    let trace = run_decomposition(landscape, None)?;
    Ok(compare(landscape, &trace))
}

/// Builds the report for an already computed Metropolis trace.
pub fn compare(landscape: &Landscape, trace: &DecompositionTrace) -> EquivalenceReport {
    let tree = enumerate_path_cycles(landscape);
    let path_sets = tree.member_sets();
    let graph_sets = trace.cycle_sets();

    let mut he_violations = Vec::new();
    let mut hm_violations = Vec::new();
    let mut order_violations = Vec::new();
    for cycle in trace.cycles() {
        let members = &cycle.members;
        let floor = landscape.min_energy(members);
        let expected_he = (landscape.boundary_floor(members) - floor).positive_part();
        if cycle.exit_height != expected_he {
            he_violations.push(IdentityViolation {
                cycle: members.clone(),
                reported: cycle.exit_height,
                expected: expected_he,
            });
        }
        if members.len() > 1 {
            let expected_hm = landscape.max_energy(members) - floor;
            if cycle.merge_height != expected_hm {
                hm_violations.push(IdentityViolation {
                    cycle: members.clone(),
                    reported: cycle.merge_height,
                    expected: expected_hm,
                });
            }
            if cycle.merge_height >= cycle.exit_height {
                order_violations.push(members.clone());
            }
        } else {
            // every per-level H_m^k of a singleton must equal its H_e
            for level in &trace.levels()[cycle.first_level..=cycle.last_level] {
                let idx = level.class_index(members).expect("cycle spans its levels");
                if let Some(hm) = level.merge_height(idx) {
                    if hm != cycle.exit_height {
                        hm_violations.push(IdentityViolation {
                            cycle: members.clone(),
                            reported: hm,
                            expected: cycle.exit_height,
                        });
                        break;
                    }
                }
            }
        }
    }

    EquivalenceReport {
        set_equal: path_sets == graph_sets,
        path_cycle_count: path_sets.len(),
        graph_cycle_count: graph_sets.len(),
        only_path_cycles: path_sets.difference(&graph_sets).cloned().collect(),
        only_graph_cycles: graph_sets.difference(&path_sets).cloned().collect(),
        he_identity_violations: he_violations,
        hm_identity_violations: hm_violations,
        order_violations,
        structural_violations: structural_violations(landscape, trace),
        conditions_log: conditions_log(landscape, trace),
        notes: vec![TRANSPOSED_NOTE.to_string()],
    }
}

fn conditions_log(landscape: &Landscape, trace: &DecompositionTrace) -> Vec<ConditionsEntry> {
    let levels = trace.levels();
    levels
        .iter()
        .map(|level| {
            let n = level.index;
            let mut failures = Vec::new();
            let mut ok = [true; 4];
            let classes = level.classes();
            for (a, class) in classes.iter().enumerate() {
                let name = landscape.describe(class);
                if !is_path_cycle(landscape, class).unwrap_or(false) {
                    ok[0] = false;
                    failures.push(format!("(I) {name} is not a path cycle"));
                }

                let floor = landscape.min_energy(class);
                if class.len() > 1 {
                    for x in landscape.boundary_unchecked(class).iter() {
                        let single = StateSet::singleton(x);
                        let Some(b) = level.class_index(&single) else {
                            continue;
                        };
                        let out = level.cost(a, b);
                        let back = level.cost(b, a);
                        if out != landscape.energy(x) - floor || back != Energy::ZERO {
                            ok[1] = false;
                            failures.push(format!(
                                "(II) costs between {name} and {{{}}}",
                                landscape.id(x)
                            ));
                        }
                    }
                }

                let expected = (landscape.boundary_floor(class) - floor).positive_part();
                if level.exit_height(a) != expected {
                    ok[2] = false;
                    failures.push(format!("(III) H_e^{n} of {name}"));
                }

                let fresh = n > 0 && !levels[n - 1].contains(class);
                if fresh && class.len() > 1 {
                    let expected = landscape.max_energy(class) - floor;
                    if level.merge_height(a) != Some(expected) {
                        ok[3] = false;
                        failures.push(format!("(IV) H_m^{n} of {name}"));
                    }
                }
            }
            ConditionsEntry {
                iteration: n,
                path_cycle: ok[0],
                singleton_costs: ok[1],
                exit_height: ok[2],
                merge_height: ok[3],
                failures,
            }
        })
        .collect()
}

/// Every path cycle, found by scanning all subsets.
pub fn brute_force_path_cycles(landscape: &Landscape) -> Result<BTreeSet<StateSet>> {
    let n = landscape.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(n, BRUTE_FORCE_LIMIT));
    }
    let adjacency: Vec<u32> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x && landscape.rate(x, y) > num_rational::Ratio::from_integer(0))
                .fold(0u32, |m, y| m | (1 << y))
        })
        .collect();
    let energy: Vec<Energy> = (0..n).map(|x| landscape.energy(x)).collect();

    let connected = |mask: u32| -> bool {
        let first = mask.trailing_zeros() as usize;
        let mut reached = 1u32 << first;
        let mut frontier = reached;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adjacency[x] & mask & !reached;
            reached |= fresh;
            frontier |= fresh;
        }
        reached == mask
    };

    let mut found = BTreeSet::new();
    for mask in 1u32..(1u32 << n) {
        let members = (0..n).filter(|&x| mask & (1 << x) != 0);
        if mask.count_ones() > 1 {
            if !connected(mask) {
                continue;
            }
            let top = members.clone().map(|x| energy[x]).max().expect("nonempty");
            let boundary = members.clone().fold(0u32, |m, x| m | adjacency[x]) & !mask;
            let floor = (0..n)
                .filter(|&y| boundary & (1 << y) != 0)
                .map(|y| energy[y])
                .min()
                .unwrap_or(Energy::Infinite);
            if top >= floor {
                continue;
            }
        }
        found.insert(members.collect());
    }
    Ok(found)
}
