//! Recursive graph-cycle construction.
//!
//! Level `k` is a partition `E^k` of the state space with a cost function
//! `V^k` between its classes. One step of [`advance`]:
//!
//! 1. `H_e^k(A) = min_{A' != A} V^k(A, A')` and `V_*^k(A, B) = V^k(A, B) - H_e^k(A)`;
//! 2. `A ->_k B` when a path of classes from `A` to `B` has zero `V_*^k` cost;
//! 3. classes that reach each other are glued into the blocks `D^{k+1}`;
//! 4. blocks with no zero-cost step out of themselves are the minimal
//!    blocks `D*^{k+1}`;
//! 5. `E^{k+1}` keeps the minimal blocks and dissolves the others back into
//!    their constituent classes; `H_m^{k+1}(A)` is the largest `H_e^k` among
//!    the constituents of `A`;
//! 6. `V^{k+1}(A, A') = H_m^{k+1}(A) + min V_*^k(B, B')` over constituents
//!    `B ⊂ A`, `B' ⊂ A'` with finite cost.
//!
//! The recursion stops at the single class `{S}`. Costs are stored sparsely:
//! a missing entry is `+inf`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::landscape::{Landscape, StateSet};

/// Seed costs `V^0` between singletons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialCostFunction {
    costs: BTreeMap<(usize, usize), Energy>,
}

impl InitialCostFunction {
    /// `V^0({i},{j}) = (H(j) - H(i))^+` on connected pairs.
    pub fn metropolis(landscape: &Landscape) -> Self {
        let mut costs = BTreeMap::new();
        for x in 0..landscape.len() {
            for &(y, _) in landscape.neighbors(x) {
                let rise = (landscape.energy(y) - landscape.energy(x)).positive_part();
                costs.insert((x, y), rise);
            }
        }
        InitialCostFunction { costs }
    }

    /// A generic cost function. It must be finite and nonnegative on exactly
    /// the ordered pairs with positive connectivity.
    pub fn from_entries<I>(landscape: &Landscape, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Energy)>,
    {
        let mut costs = BTreeMap::new();
        for (x, y, cost) in entries {
            if x >= landscape.len() || y >= landscape.len() {
                return Err(Error::ForeignState(x.max(y)));
            }
            if !cost.is_finite() {
                continue;
            }
            if !landscape.adjacent(x, y) {
                return Err(Error::InvalidSeedCost(format!(
                    "finite cost between unconnected states `{}` and `{}`",
                    landscape.id(x),
                    landscape.id(y)
                )));
            }
            if cost < Energy::ZERO {
                return Err(Error::InvalidSeedCost(format!(
                    "negative cost from `{}` to `{}`",
                    landscape.id(x),
                    landscape.id(y)
                )));
            }
            costs.insert((x, y), cost);
        }
        for x in 0..landscape.len() {
            for &(y, _) in landscape.neighbors(x) {
                if !costs.contains_key(&(x, y)) {
                    return Err(Error::InvalidSeedCost(format!(
                        "missing cost from `{}` to `{}`",
                        landscape.id(x),
                        landscape.id(y)
                    )));
                }
            }
        }
        Ok(InitialCostFunction { costs })
    }

    pub fn get(&self, x: usize, y: usize) -> Energy {
        self.costs.get(&(x, y)).copied().unwrap_or(Energy::Infinite)
    }
}

/// One generation `E^k` of the construction with its cost functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionLevel {
    pub index: usize,
    classes: Vec<StateSet>,
    class_of: Vec<usize>,
    cost: BTreeMap<(usize, usize), Energy>,
    exit_height: Vec<Energy>,
    renormalized: BTreeMap<(usize, usize), Energy>,
    merge_height: Option<Vec<Energy>>,
}

impl PartitionLevel {
    fn new(
        index: usize,
        mut classes: Vec<StateSet>,
        n_states: usize,
        cost_of: impl Fn(&StateSet, &StateSet) -> Energy,
        merge_of: Option<&dyn Fn(&StateSet) -> Energy>,
        links: impl Fn(&[usize]) -> Vec<(usize, usize)>,
    ) -> Self {
        classes.sort();
        let mut class_of = vec![usize::MAX; n_states];
        for (c, class) in classes.iter().enumerate() {
            for x in class.iter() {
                class_of[x] = c;
            }
        }
        let mut cost = BTreeMap::new();
        for (a, b) in links(&class_of) {
            let v = cost_of(&classes[a], &classes[b]);
            if v.is_finite() {
                cost.insert((a, b), v);
            }
        }
        let mut exit_height = vec![Energy::Infinite; classes.len()];
        for (&(a, _), &v) in &cost {
            exit_height[a] = exit_height[a].min(v);
        }
        let renormalized = cost
            .iter()
            .map(|(&(a, b), &v)| ((a, b), v - exit_height[a]))
            .collect();
        let merge_height = merge_of.map(|f| classes.iter().map(f).collect());
        PartitionLevel {
            index,
            classes,
            class_of,
            cost,
            exit_height,
            renormalized,
            merge_height,
        }
    }

    pub fn classes(&self) -> &[StateSet] {
        &self.classes
    }

    pub fn class_index(&self, class: &StateSet) -> Option<usize> {
        self.classes.binary_search(class).ok()
    }

    /// Index of the class holding state `x`.
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn contains(&self, class: &StateSet) -> bool {
        self.class_index(class).is_some()
    }

    pub fn is_terminal(&self) -> bool {
        self.classes.len() == 1
    }

    /// `V^k(A, B)` by class index; `+inf` when absent.
    pub fn cost(&self, a: usize, b: usize) -> Energy {
        self.cost.get(&(a, b)).copied().unwrap_or(Energy::Infinite)
    }

    /// `V_*^k(A, B)` by class index; `+inf` when absent.
    pub fn renormalized_cost(&self, a: usize, b: usize) -> Energy {
        self.renormalized
            .get(&(a, b))
            .copied()
            .unwrap_or(Energy::Infinite)
    }

    /// Finite entries of `V^k`, ordered by class index pair.
    pub fn finite_costs(&self) -> impl Iterator<Item = ((usize, usize), Energy)> + '_ {
        self.cost.iter().map(|(&k, &v)| (k, v))
    }

    pub fn finite_renormalized_costs(&self) -> impl Iterator<Item = ((usize, usize), Energy)> + '_ {
        self.renormalized.iter().map(|(&k, &v)| (k, v))
    }

    /// `H_e^k(A)`.
    pub fn exit_height(&self, a: usize) -> Energy {
        self.exit_height[a]
    }

    /// `H_m^k(A)`; `None` on level 0.
    pub fn merge_height(&self, a: usize) -> Option<Energy> {
        self.merge_height.as_ref().map(|m| m[a])
    }

    /// Looks up `V^k` between two classes given as sets.
    pub fn cost_between(&self, a: &StateSet, b: &StateSet) -> Result<Energy> {
        Ok(self.cost(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn renormalized_between(&self, a: &StateSet, b: &StateSet) -> Result<Energy> {
        Ok(self.renormalized_cost(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn exit_height_of(&self, a: &StateSet) -> Result<Energy> {
        Ok(self.exit_height(self.index_of(a)?))
    }

    pub fn merge_height_of(&self, a: &StateSet) -> Result<Option<Energy>> {
        Ok(self.merge_height(self.index_of(a)?))
    }

    fn index_of(&self, class: &StateSet) -> Result<usize> {
        self.class_index(class).ok_or(Error::UnknownClass)
    }

    /// Targets of zero-cost renormalized steps out of class `a`.
    fn zero_steps(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.renormalized
            .range((a, 0)..(a + 1, 0))
            .filter(|(_, &v)| v == Energy::ZERO)
            .map(|(&(_, b), _)| b)
    }
}

/// Level 0 under the Metropolis seed.
pub fn initial_level(landscape: &Landscape) -> PartitionLevel {
    initial_level_with(landscape, &InitialCostFunction::metropolis(landscape))
}

pub fn initial_level_with(landscape: &Landscape, seed: &InitialCostFunction) -> PartitionLevel {
    let classes = (0..landscape.len()).map(StateSet::singleton).collect();
    PartitionLevel::new(
        0,
        classes,
        landscape.len(),
        |a, b| seed.get(a.indices()[0], b.indices()[0]),
        None,
        |class_of| {
            seed.costs
                .keys()
                .map(|&(x, y)| (class_of[x], class_of[y]))
                .collect()
        },
    )
}

/// `A ->_k B`: a path of classes from `a` to `b` with zero renormalized cost.
pub fn zero_cost_reaches(level: &PartitionLevel, a: &StateSet, b: &StateSet) -> Result<bool> {
    let from = level.index_of(a)?;
    let to = level.index_of(b)?;
    let mut seen = vec![false; level.classes.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(c) = queue.pop_front() {
        if c == to {
            return Ok(true);
        }
        for d in level.zero_steps(c) {
            if !seen[d] {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    }
    Ok(false)
}

/// Result of one recursion step.
#[derive(Clone, Debug)]
pub struct Advance {
    pub next: PartitionLevel,
    /// `D^{k+1}`, sorted.
    pub merged: Vec<StateSet>,
    /// `D*^{k+1}`, sorted.
    pub minimal: Vec<StateSet>,
}

pub fn advance(level: &PartitionLevel) -> Result<Advance> {
    if level.is_terminal() {
        return Err(Error::AlreadyTerminal);
    }
    let count = level.classes.len();

    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(count, 0);
    let handles: Vec<NodeIndex> = (0..count).map(|_| graph.add_node(())).collect();
    for a in 0..count {
        for b in level.zero_steps(a) {
            graph.add_edge(handles[a], handles[b], ());
        }
    }
    let mut block_of = vec![0usize; count];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for component in tarjan_scc(&graph) {
        let id = blocks.len();
        let members: Vec<usize> = component.into_iter().map(|h| h.index()).collect();
        for &c in &members {
            block_of[c] = id;
        }
        blocks.push(members);
    }

    let is_minimal: Vec<bool> = blocks
        .iter()
        .enumerate()
        .map(|(id, members)| {
            members
                .iter()
                .all(|&c| level.zero_steps(c).all(|d| block_of[d] == id))
        })
        .collect();

    let union_of = |members: &[usize]| -> StateSet {
        StateSet::from_indices(members.iter().flat_map(|&c| level.classes[c].iter()))
    };
    let mut merged: Vec<StateSet> = blocks.iter().map(|b| union_of(b)).collect();
    merged.sort();

    let mut minimal = Vec::new();
    let mut next_classes = Vec::new();
    for (id, members) in blocks.iter().enumerate() {
        if is_minimal[id] {
            let block = union_of(members);
            minimal.push(block.clone());
            next_classes.push(block);
        } else {
            next_classes.extend(members.iter().map(|&c| level.classes[c].clone()));
        }
    }
    minimal.sort();

    let n_states = level.class_of.len();
    // constituents of each new class, keyed by the new class's smallest state
    let merge_of = |class: &StateSet| -> Energy {
        constituents(level, class)
            .map(|c| level.exit_height[c])
            .max()
            .expect("class has constituents")
    };
    let mut next = PartitionLevel::new(
        level.index + 1,
        next_classes,
        n_states,
        |_, _| Energy::Infinite,
        Some(&merge_of),
        |_| Vec::new(),
    );

    // V^{k+1}(A, A') = H_m^{k+1}(A) + min V_*^k(B, B')
    let mut inner: BTreeMap<(usize, usize), Energy> = BTreeMap::new();
    for (&(b, b2), &v) in &level.renormalized {
        let a = next.class_of[level.classes[b].indices()[0]];
        let a2 = next.class_of[level.classes[b2].indices()[0]];
        if a == a2 {
            continue;
        }
        inner
            .entry((a, a2))
            .and_modify(|m| *m = (*m).min(v))
            .or_insert(v);
    }
    let merge = next.merge_height.clone().expect("set above");
    let cost: BTreeMap<(usize, usize), Energy> = inner
        .into_iter()
        .map(|((a, a2), v)| ((a, a2), merge[a] + v))
        .collect();
    let mut exit_height = vec![Energy::Infinite; next.classes.len()];
    for (&(a, _), &v) in &cost {
        exit_height[a] = exit_height[a].min(v);
    }
    next.renormalized = cost
        .iter()
        .map(|(&(a, b), &v)| ((a, b), v - exit_height[a]))
        .collect();
    next.cost = cost;
    next.exit_height = exit_height;

    Ok(Advance {
        next,
        merged,
        minimal,
    })
}

/// Indices of the classes of `level` contained in `class`.
fn constituents<'a>(level: &'a PartitionLevel, class: &'a StateSet) -> impl Iterator<Item = usize> + 'a {
    let mut seen = BTreeSet::new();
    class
        .iter()
        .map(|x| level.class_of[x])
        .filter(move |&c| seen.insert(c))
}

/// One element of the graph-cycle family `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCycle {
    pub members: StateSet,
    /// `H_e(A)`: the supremum of `H_e^k(A)` over the levels holding `A`;
    /// `+inf` for the whole space.
    pub exit_height: Energy,
    /// `H_m(A)`: `sup {H_e(B) : B ∈ C, B ⊊ A} ∨ 0` for non-singletons,
    /// `H_e(A)` for singletons.
    pub merge_height: Energy,
    /// The per-level `H_m^k(A)` at the level where `A` first appears;
    /// `None` for the singletons of level 0.
    pub merge_height_at_creation: Option<Energy>,
    pub first_level: usize,
    pub last_level: usize,
}

/// `D^{k+1}` and `D*^{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeStep {
    pub merged: Vec<StateSet>,
    pub minimal: Vec<StateSet>,
}

/// The full record of a decomposition run.
#[derive(Clone, Debug)]
pub struct DecompositionTrace {
    levels: Vec<PartitionLevel>,
    steps: Vec<MergeStep>,
    cycles: Vec<GraphCycle>,
}

impl DecompositionTrace {
    pub fn levels(&self) -> &[PartitionLevel] {
        &self.levels
    }

    /// `steps()[k]` holds `D^{k+1}` and `D*^{k+1}`.
    pub fn steps(&self) -> &[MergeStep] {
        &self.steps
    }

    /// First iteration whose partition is `{S}`.
    pub fn n_s(&self) -> usize {
        self.levels.len() - 1
    }

    /// Graph cycles ordered by size, then by member indices.
    pub fn cycles(&self) -> &[GraphCycle] {
        &self.cycles
    }

    pub fn cycle(&self, members: &StateSet) -> Option<&GraphCycle> {
        self.cycles.iter().find(|c| &c.members == members)
    }

    pub fn cycle_sets(&self) -> BTreeSet<StateSet> {
        self.cycles.iter().map(|c| c.members.clone()).collect()
    }

    /// `M*(A)`: the maximal graph cycles strictly inside `A`.
    pub fn maximal_subcycles(&self, members: &StateSet) -> Vec<StateSet> {
        let proper: Vec<&StateSet> = self
            .cycles
            .iter()
            .map(|c| &c.members)
            .filter(|b| *b != members && b.is_subset(members))
            .collect();
        let mut maximal: Vec<StateSet> = proper
            .iter()
            .filter(|b| !proper.iter().any(|c| c != *b && b.is_subset(c)))
            .map(|b| (*b).clone())
            .collect();
        maximal.sort();
        maximal
    }
}

/// Runs the recursion from the given seed (Metropolis when `None`) until the
/// partition is `{S}`.
pub fn run_decomposition(
    landscape: &Landscape,
    seed: Option<&InitialCostFunction>,
) -> Result<DecompositionTrace> {
    let metropolis;
    let seed = match seed {
        Some(s) => s,
        None => {
            metropolis = InitialCostFunction::metropolis(landscape);
            &metropolis
        }
    };
    let mut levels = vec![initial_level_with(landscape, seed)];
    let mut steps = Vec::new();
    while !levels.last().expect("nonempty").is_terminal() {
        if steps.len() >= landscape.len() {
            return Err(Error::NonTermination(steps.len()));
        }
        let Advance {
            next,
            merged,
            minimal,
        } = advance(levels.last().expect("nonempty"))?;
        steps.push(MergeStep { merged, minimal });
        levels.push(next);
    }

    let whole = landscape.all_states();
    let mut spans: BTreeMap<StateSet, (usize, usize, Energy, Option<Energy>)> = BTreeMap::new();
    for level in &levels {
        for (c, class) in level.classes.iter().enumerate() {
            let he = level.exit_height(c);
            spans
                .entry(class.clone())
                .and_modify(|(_, last, sup, _)| {
                    *last = level.index;
                    *sup = (*sup).max(he);
                })
                .or_insert((level.index, level.index, he, level.merge_height(c)));
        }
    }
    let exit: BTreeMap<StateSet, Energy> = spans
        .iter()
        .map(|(set, &(_, _, sup, _))| {
            let he = if *set == whole { Energy::Infinite } else { sup };
            (set.clone(), he)
        })
        .collect();

    let mut cycles: Vec<GraphCycle> = spans
        .into_iter()
        .map(|(members, (first, last, _, at_creation))| {
            let exit_height = exit[&members];
            let merge_height = if members.len() == 1 {
                exit_height
            } else {
                exit.iter()
                    .filter(|(b, _)| **b != members && b.is_subset(&members))
                    .map(|(_, &he)| he)
                    .fold(Energy::ZERO, Energy::max)
            };
            GraphCycle {
                members,
                exit_height,
                merge_height,
                merge_height_at_creation: at_creation,
                first_level: first,
                last_level: last,
            }
        })
        .collect();
    cycles.sort_by(|a, b| {
        a.members
            .len()
            .cmp(&b.members.len())
            .then_with(|| a.members.cmp(&b.members))
    });

    Ok(DecompositionTrace {
        levels,
        steps,
        cycles,
    })
}

/// Checks the structural laws of a trace and returns one message per
/// violation:
///
/// - every level partitions the state space and each class of `E^{k+1}` is a
///   union of classes of `E^k`;
/// - `E^{k+1} \ E^k = D*^{k+1}`;
/// - for `A ∈ E^k ∩ E^{k+1}`: `H_m^{k+1}(A) = H_e^{k+1}(A) = H_e^k(A)`;
/// - for `A, B ∈ E^k ∩ E^{k+1}`: `V^{k+1}(A, B) = V^k(A, B)`;
/// - the cycle family is nested-or-disjoint.
pub fn structural_violations(landscape: &Landscape, trace: &DecompositionTrace) -> Vec<String> {
    let mut out = Vec::new();
    let n = landscape.len();
    let name = |s: &StateSet| landscape.describe(s);

    for level in &trace.levels {
        let mut count = vec![0usize; n];
        for class in &level.classes {
            for x in class.iter() {
                count[x] += 1;
            }
        }
        if count.iter().any(|&c| c != 1) {
            out.push(format!("E^{} is not a partition", level.index));
        }
    }
    if trace.levels[0].classes.iter().any(|c| c.len() != 1) {
        out.push("E^0 is not the singleton partition".into());
    }
    if trace.levels.last().map(|l| l.classes.len()) != Some(1) {
        out.push("last level is not {S}".into());
    }

    for (k, pair) in trace.levels.windows(2).enumerate() {
        let (cur, next) = (&pair[0], &pair[1]);
        for class in &next.classes {
            let covered: usize = constituents(cur, class).map(|c| cur.classes[c].len()).sum();
            if covered != class.len() {
                out.push(format!("class {} of E^{} splits a class of E^{k}", name(class), k + 1));
            }
        }

        let fresh: Vec<StateSet> = next
            .classes
            .iter()
            .filter(|c| !cur.contains(c))
            .cloned()
            .collect();
        if fresh != trace.steps[k].minimal {
            out.push(format!("E^{} \\ E^{k} differs from D*^{}", k + 1, k + 1));
        }

        let persisting: Vec<(usize, usize)> = cur
            .classes
            .iter()
            .enumerate()
            .filter_map(|(i, c)| next.class_index(c).map(|j| (i, j)))
            .collect();
        for &(i, j) in &persisting {
            let he = cur.exit_height(i);
            if next.merge_height(j) != Some(he) || next.exit_height(j) != he {
                out.push(format!(
                    "drop equation fails for {} between levels {k} and {}",
                    name(&cur.classes[i]),
                    k + 1
                ));
            }
            for &(i2, j2) in &persisting {
                if i != i2 && cur.cost(i, i2) != next.cost(j, j2) {
                    out.push(format!(
                        "cost between {} and {} changes from level {k} to {}",
                        name(&cur.classes[i]),
                        name(&cur.classes[i2]),
                        k + 1
                    ));
                }
            }
        }
    }

    let sets: Vec<&StateSet> = trace.cycles.iter().map(|c| &c.members).collect();
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if !(a.is_disjoint(b) || a.is_subset(b) || b.is_subset(a)) {
                out.push(format!("graph cycles {} and {} overlap", name(a), name(b)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::EnergyScale;
    use crate::fixtures;
    use crate::landscape::EdgeSpec;

    fn set(l: &Landscape, ids: &[&str]) -> StateSet {
        l.state_set(ids).unwrap()
    }

    #[test]
    fn zero_reachability_on_fig1_level0() {
        let l = fixtures::fig1();
        let level = initial_level(&l);
        let b = set(&l, &["b"]);
        let c = set(&l, &["c"]);
        assert!(zero_cost_reaches(&level, &b, &c).unwrap());
        assert!(!zero_cost_reaches(&level, &c, &b).unwrap());
        assert!(zero_cost_reaches(&level, &c, &c).unwrap());
        assert_eq!(
            zero_cost_reaches(&level, &set(&l, &["c", "d"]), &c),
            Err(Error::UnknownClass)
        );
    }

    #[test]
    fn flat_landscape_level0() {
        let scale = EnergyScale::default();
        let h = Energy::from_units(3, scale);
        let l = Landscape::new(
            vec![("u".into(), h), ("v".into(), h), ("w".into(), h)],
            vec![EdgeSpec::new("u", "v"), EdgeSpec::new("v", "w")],
            scale,
        )
        .unwrap();
        let level = initial_level(&l);
        assert!(level.finite_costs().all(|(_, v)| v == Energy::ZERO));
        assert!((0..3).all(|c| level.exit_height(c) == Energy::ZERO));
        let trace = run_decomposition(&l, None).unwrap();
        assert_eq!(trace.n_s(), 1);
        assert_eq!(trace.cycles().len(), 4);
    }

    #[test]
    fn terminal_level_cannot_advance() {
        let scale = EnergyScale::default();
        let l = Landscape::new(vec![("s".into(), Energy::ZERO)], vec![], scale).unwrap();
        let level = initial_level(&l);
        assert!(level.is_terminal());
        assert_eq!(advance(&level).unwrap_err(), Error::AlreadyTerminal);
        let trace = run_decomposition(&l, None).unwrap();
        assert_eq!(trace.n_s(), 0);
        assert_eq!(trace.cycles().len(), 1);
        assert_eq!(trace.cycles()[0].exit_height, Energy::Infinite);
    }

    #[test]
    fn fig1_maximal_subcycles() {
        let l = fixtures::fig1();
        let trace = run_decomposition(&l, None).unwrap();
        assert_eq!(
            trace.maximal_subcycles(&set(&l, &["h", "i", "j"])),
            vec![set(&l, &["h"]), set(&l, &["i", "j"])]
        );
        assert!(structural_violations(&l, &trace).is_empty());
    }

    #[test]
    fn generic_seed_validation() {
        let l = fixtures::fig1();
        let a = l.state("a").unwrap();
        let c = l.state("c").unwrap();
        let err = InitialCostFunction::from_entries(&l, [(a, c, Energy::ZERO)]).unwrap_err();
        assert!(matches!(err, Error::InvalidSeedCost(_)));
        let err = InitialCostFunction::from_entries(&l, []).unwrap_err();
        assert!(matches!(err, Error::InvalidSeedCost(_)));

        let metropolis = InitialCostFunction::metropolis(&l);
        let entries: Vec<(usize, usize, Energy)> = metropolis
            .costs
            .iter()
            .map(|(&(x, y), &v)| (x, y, v))
            .collect();
        let rebuilt = InitialCostFunction::from_entries(&l, entries).unwrap();
        assert_eq!(rebuilt, metropolis);
    }

    #[test]
    fn generic_seed_still_terminates() {
        // constant unit cost on every edge of fig1
        let l = fixtures::fig1();
        let unit = Energy::from_units(1, l.scale());
        let entries: Vec<_> = (0..l.len())
            .flat_map(|x| l.neighbors(x).iter().map(move |&(y, _)| (x, y)))
            .map(|(x, y)| (x, y, unit))
            .collect();
        let seed = InitialCostFunction::from_entries(&l, entries).unwrap();
        let trace = run_decomposition(&l, Some(&seed)).unwrap();
        assert_eq!(trace.levels().last().unwrap().classes(), &[l.all_states()]);
        assert!(structural_violations(&l, &trace).is_empty());
    }
}
