//! Path cycles: connected sets whose highest energy lies strictly below the
//! lowest energy on their exterior boundary, plus all singletons.
//!
//! Every connected component of a sub-level set `{H <= c}` is a path cycle,
//! and every non-trivial path cycle `A` is the component of `{H <= max_A H}`
//! that contains it. [`enumerate_path_cycles`] therefore sweeps the distinct
//! energy values upward with a union-find and records each component the
//! moment it changes.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::landscape::{Landscape, StateSet};
use crate::union_find::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleNode {
    pub members: StateSet,
    /// Γ(A) = min_{∂A} H − min_A H; `+inf` for the whole space.
    pub depth: Energy,
    /// Γ̃(A) = max_A H − min_A H.
    pub resistance: Energy,
    pub ground: StateSet,
    /// min_{∂A} H; `+inf` for the whole space.
    pub boundary_floor: Energy,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// A singleton that is not a strict local minimum.
    pub trivial: bool,
}

/// The nested hierarchy of all path cycles. Leaves are the singletons; the
/// root is the whole state space.
#[derive(Clone, Debug)]
pub struct CycleTree {
    nodes: Vec<CycleNode>,
    root: usize,
}

impl CycleTree {
    pub fn nodes(&self) -> &[CycleNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, id: usize) -> &CycleNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, members: &StateSet) -> Option<usize> {
        self.nodes.iter().position(|n| &n.members == members)
    }

    pub fn member_sets(&self) -> BTreeSet<StateSet> {
        self.nodes.iter().map(|n| n.members.clone()).collect()
    }
}

/// Whether `set` is a singleton or a connected set with
/// `max_A H < min_{∂A} H`.
pub fn is_path_cycle(landscape: &Landscape, set: &StateSet) -> Result<bool> {
    if set.len() == 1 {
        landscape.exterior_boundary(set)?;
        return Ok(true);
    }
    if !landscape.is_connected_subset(set)? {
        return Ok(false);
    }
    Ok(landscape.max_energy(set) < landscape.boundary_floor(set))
}

/// States reachable from `start` along paths whose energies stay `<= level`.
pub fn sublevel_component(landscape: &Landscape, start: usize, level: Energy) -> Result<StateSet> {
    if start >= landscape.len() {
        return Err(Error::ForeignState(start));
    }
    if level < landscape.energy(start) {
        return Err(Error::LevelBelowStart);
    }
    let mut seen = vec![false; landscape.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut members = vec![start];
    while let Some(x) = queue.pop_front() {
        for &(y, _) in landscape.neighbors(x) {
            if !seen[y] && landscape.energy(y) <= level {
                seen[y] = true;
                members.push(y);
                queue.push_back(y);
            }
        }
    }
    Ok(StateSet::from_indices(members))
}

/// Γ(A). Fails with `NotACycle` unless `set` is a path cycle.
pub fn depth(landscape: &Landscape, set: &StateSet) -> Result<Energy> {
    if !is_path_cycle(landscape, set)? {
        return Err(Error::NotACycle);
    }
    Ok(landscape.boundary_floor(set) - landscape.min_energy(set))
}

/// Γ̃(A). Fails with `NotACycle` unless `set` is a path cycle.
pub fn resistance_height(landscape: &Landscape, set: &StateSet) -> Result<Energy> {
    if !is_path_cycle(landscape, set)? {
        return Err(Error::NotACycle);
    }
    Ok(landscape.max_energy(set) - landscape.min_energy(set))
}

fn make_node(landscape: &Landscape, members: StateSet, children: Vec<usize>) -> CycleNode {
    let floor = landscape.min_energy(&members);
    let top = landscape.max_energy(&members);
    let boundary_floor = landscape.boundary_floor(&members);
    let ground = members
        .iter()
        .filter(|&x| landscape.energy(x) == floor)
        .collect();
    CycleNode {
        trivial: members.len() == 1 && top >= boundary_floor,
        depth: boundary_floor - floor,
        resistance: top - floor,
        ground,
        boundary_floor,
        parent: None,
        children,
        members,
    }
}

/// All path cycles of the landscape, organized as a tree.
///
/// States sharing one energy value are activated together before any
/// component is recorded, so a flat plateau never yields intermediate
/// components.
pub fn enumerate_path_cycles(landscape: &Landscape) -> CycleTree {
    let n = landscape.len();
    let mut nodes: Vec<CycleNode> = (0..n)
        .map(|x| make_node(landscape, StateSet::singleton(x), Vec::new()))
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| landscape.energy(x));

    let mut uf = UnionFind::new(n);
    let mut active = vec![false; n];
    // node currently representing the component rooted at each uf root
    let mut node_of_root: Vec<usize> = (0..n).collect();

    for level in order.chunk_by(|&x, &y| landscape.energy(x) == landscape.energy(y)) {
        for &x in level {
            active[x] = true;
        }
        // Components that existed below this level and touch a new state.
        let mut absorbed: Vec<(usize, usize)> = Vec::new();
        for &x in level {
            for &(y, _) in landscape.neighbors(x) {
                if active[y] && landscape.energy(y) < landscape.energy(x) {
                    absorbed.push((x, node_of_root[uf.find(y)]));
                }
            }
        }
        for &x in level {
            for &(y, _) in landscape.neighbors(x) {
                if active[y] {
                    uf.union(x, y);
                }
            }
        }

        let mut groups: HashMap<usize, BTreeSet<usize>> = HashMap::new();
        for &x in level {
            groups.entry(uf.find(x)).or_default().insert(x);
        }
        for (x, old) in absorbed {
            groups.entry(uf.find(x)).or_default().insert(old);
        }
        let mut groups: Vec<(usize, BTreeSet<usize>)> = groups.into_iter().collect();
        groups.sort_unstable_by_key(|(root, _)| *root);

        for (root, children) in groups {
            if children.len() == 1 {
                // an isolated new state: its leaf already represents it
                node_of_root[root] = *children.first().expect("nonempty");
                continue;
            }
            let children: Vec<usize> = children.into_iter().collect();
            let members = children
                .iter()
                .flat_map(|&c| nodes[c].members.iter())
                .collect();
            let id = nodes.len();
            for &c in &children {
                nodes[c].parent = Some(id);
            }
            nodes.push(make_node(landscape, members, children));
            node_of_root[root] = id;
        }
    }

    let root = node_of_root[uf.find(0)];
    CycleTree { nodes, root }
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

    fn units(l: &Landscape, u: i64) -> Energy {
        Energy::from_units(u, l.scale())
    }

    #[test]
    fn path_cycle_predicate_on_fig1() {
        let l = fixtures::fig1();
        assert!(is_path_cycle(&l, &set(&l, &["c", "d", "e", "f"])).unwrap());
        assert!(!is_path_cycle(&l, &set(&l, &["d", "e", "f"])).unwrap());
        assert!(is_path_cycle(&l, &set(&l, &["k"])).unwrap());
        assert!(!is_path_cycle(&l, &set(&l, &["a", "c"])).unwrap());
        assert!(is_path_cycle(&l, &l.all_states()).unwrap());
        assert_eq!(is_path_cycle(&l, &StateSet::default()), Err(Error::EmptySet));
    }

    #[test]
    fn sublevel_components_on_fig1() {
        let l = fixtures::fig1();
        let e = l.state("e").unwrap();
        let i = l.state("i").unwrap();
        assert_eq!(
            sublevel_component(&l, e, units(&l, 2)).unwrap(),
            set(&l, &["c", "d", "e", "f"])
        );
        assert_eq!(sublevel_component(&l, i, units(&l, 0)).unwrap(), set(&l, &["i"]));
        assert_eq!(sublevel_component(&l, i, units(&l, 5)).unwrap(), l.all_states());
        assert_eq!(
            sublevel_component(&l, e, units(&l, 1)),
            Err(Error::LevelBelowStart)
        );
        // a level between two energy values behaves like the lower one
        let between = Energy::Finite(units(&l, 3).ticks().unwrap() + 500_000);
        assert_eq!(
            sublevel_component(&l, i, between).unwrap(),
            sublevel_component(&l, i, units(&l, 3)).unwrap()
        );
    }

    #[test]
    fn fig1_cycle_family() {
        let l = fixtures::fig1();
        let tree = enumerate_path_cycles(&l);
        let mut expected: BTreeSet<StateSet> = (0..l.len()).map(StateSet::singleton).collect();
        for ids in [
            &["c", "d", "e", "f"][..],
            &["i", "j"],
            &["h", "i", "j"],
            &["c", "d", "e", "f", "g", "h", "i", "j"],
        ] {
            expected.insert(set(&l, ids));
        }
        expected.insert(l.all_states());
        assert_eq!(tree.member_sets(), expected);
        assert_eq!(tree.len(), 16);
        assert_eq!(tree.node(tree.root()).members, l.all_states());
        assert_eq!(tree.node(tree.root()).depth, Energy::Infinite);
    }

    #[test]
    fn fig1_depths_and_resistances() {
        let l = fixtures::fig1();
        let ij = set(&l, &["i", "j"]);
        assert_eq!(depth(&l, &ij).unwrap(), units(&l, 3));
        assert_eq!(resistance_height(&l, &ij).unwrap(), units(&l, 1));
        let hij = set(&l, &["h", "i", "j"]);
        assert_eq!(depth(&l, &hij).unwrap(), units(&l, 4));
        assert_eq!(resistance_height(&l, &hij).unwrap(), units(&l, 3));
        assert_eq!(resistance_height(&l, &set(&l, &["g"])).unwrap(), Energy::ZERO);
        assert_eq!(
            depth(&l, &set(&l, &["d", "e", "f"])),
            Err(Error::NotACycle)
        );
    }

    #[test]
    fn tree_links_are_consistent() {
        let l = fixtures::fig1();
        let tree = enumerate_path_cycles(&l);
        for (id, node) in tree.nodes().iter().enumerate() {
            for &c in &node.children {
                assert_eq!(tree.node(c).parent, Some(id));
                assert!(tree.node(c).members.is_subset(&node.members));
            }
            assert_eq!(node.parent.is_none(), id == tree.root());
        }
        let hij = tree.find(&set(&l, &["h", "i", "j"])).unwrap();
        let mut kids: Vec<StateSet> = tree
            .node(hij)
            .children
            .iter()
            .map(|&c| tree.node(c).members.clone())
            .collect();
        kids.sort();
        let mut expected = vec![set(&l, &["h"]), set(&l, &["i", "j"])];
        expected.sort();
        assert_eq!(kids, expected);
    }

    #[test]
    fn triviality_flags() {
        let l = fixtures::fig1();
        let tree = enumerate_path_cycles(&l);
        let flag = |id: &str| tree.node(tree.find(&set(&l, &[id])).unwrap()).trivial;
        // strict local minima: a (2 < 5), c, i
        assert!(!flag("a"));
        assert!(!flag("c"));
        assert!(!flag("i"));
        // plateau members and saddles are trivial
        for id in ["b", "d", "e", "f", "g", "h", "j", "k"] {
            assert!(flag(id), "{id}");
        }
    }

    #[test]
    fn two_state_and_single_state() {
        let scale = EnergyScale::default();
        let l = Landscape::new(
            vec![
                ("x".into(), Energy::from_units(0, scale)),
                ("y".into(), Energy::from_units(1, scale)),
            ],
            vec![EdgeSpec::new("x", "y")],
            scale,
        )
        .unwrap();
        let tree = enumerate_path_cycles(&l);
        assert_eq!(tree.len(), 3);
        assert_eq!(tree.node(tree.root()).members, l.all_states());

        let one = Landscape::new(vec![("s".into(), Energy::ZERO)], vec![], scale).unwrap();
        let tree = enumerate_path_cycles(&one);
        assert_eq!(tree.len(), 1);
        assert_eq!(tree.root(), 0);
        assert_eq!(tree.node(0).depth, Energy::Infinite);
    }
}
