use std::collections::BTreeSet;

use proptest::prelude::*;

use metacycles_core::equivalence::{brute_force_path_cycles, verify_equivalence};
use metacycles_core::export::trace_json;
use metacycles_core::format::{parse_landscape, to_json};
use metacycles_core::graph_cycles::{run_decomposition, structural_violations};
use metacycles_core::landscape::EdgeSpec;
use metacycles_core::path_cycles::{enumerate_path_cycles, is_path_cycle, sublevel_component};
use metacycles_core::{Energy, EnergyScale, Landscape, StateSet};

#[derive(Clone, Debug)]
struct Raw {
    energies: Vec<i64>,
    /// parent of state i + 1, as an index into 0..=i (reduced modulo)
    tree: Vec<usize>,
    /// extra edge flags over the upper triangle
    extra: Vec<bool>,
}

fn raw_landscape(max_states: usize) -> impl Strategy<Value = Raw> {
    (2..=max_states).prop_flat_map(|n| {
        (
            prop::collection::vec(0i64..=6, n),
            prop::collection::vec(0usize..64, n - 1),
            prop::collection::vec(prop::bool::weighted(0.25), n * (n - 1) / 2),
        )
            .prop_map(|(energies, tree, extra)| Raw { energies, tree, extra })
    })
}

fn build(raw: &Raw, order: Option<&[usize]>) -> Landscape {
    let n = raw.energies.len();
    let scale = EnergyScale::default();
    let name = |i: usize| format!("s{i}");
    let mut edges = Vec::new();
    let mut adjacent = vec![vec![false; n]; n];
    for i in 1..n {
        let j = raw.tree[i - 1] % i;
        adjacent[i][j] = true;
        adjacent[j][i] = true;
        edges.push((j, i));
    }
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if raw.extra[k] && !adjacent[i][j] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    let identity: Vec<usize> = (0..n).collect();
    let order = order.unwrap_or(&identity);
    let states = order
        .iter()
        .map(|&i| (name(i), Energy::from_units(raw.energies[i], scale)))
        .collect();
    let edges = edges
        .into_iter()
        .map(|(a, b)| EdgeSpec::new(name(a), name(b)))
        .collect();
    Landscape::new(states, edges, scale).unwrap()
}

fn reachable_within(l: &Landscape, set: &StateSet) -> bool {
    // Floyd-Warshall style closure restricted to the set
    let members: Vec<usize> = set.iter().collect();
    let m = members.len();
    let mut reach = vec![vec![false; m]; m];
    for a in 0..m {
        reach[a][a] = true;
        for b in 0..m {
            if l.adjacent(members[a], members[b]) {
                reach[a][b] = true;
            }
        }
    }
    for k in 0..m {
        for a in 0..m {
            for b in 0..m {
                if reach[a][k] && reach[k][b] {
                    reach[a][b] = true;
                }
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&r| r))
}

fn all_subsets(n: usize) -> impl Iterator<Item = StateSet> {
    (1u32..(1 << n)).map(move |mask| (0..n).filter(|&x| mask & (1 << x) != 0).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_is_stochastic_and_reversible(raw in raw_landscape(10), beta in 0.05f64..4.0) {
        let l = build(&raw, None);
        let p = l.metropolis_kernel(beta).unwrap();
        let scale = l.scale();
        for x in 0..l.len() {
            prop_assert!((p.row_sum(x) - 1.0).abs() < 1e-12);
            for y in 0..l.len() {
                let v = p.get(x, y);
                prop_assert!((0.0..=1.0).contains(&v));
                if x != y {
                    // e^{-βH(x)} p(x,y) = q(x,y) e^{-β max(H(x),H(y))}
                    let hx = l.energy(x).to_f64(scale);
                    let hy = l.energy(y).to_f64(scale);
                    let left = (-beta * hx).exp() * v;
                    let right = (-beta * hy).exp() * p.get(y, x);
                    prop_assert!((left - right).abs() <= 1e-12 * left.abs().max(1e-300));
                }
            }
        }
    }

    #[test]
    fn boundary_and_connectivity(raw in raw_landscape(8)) {
        let l = build(&raw, None);
        for set in all_subsets(l.len()) {
            let boundary = l.exterior_boundary(&set).unwrap();
            prop_assert!(boundary.is_disjoint(&set));
            for y in boundary.iter() {
                prop_assert!(set.iter().any(|x| l.adjacent(x, y)));
            }
            prop_assert_eq!(l.is_connected_subset(&set).unwrap(), reachable_within(&l, &set));
        }
    }

    #[test]
    fn path_cycle_tree_laws(raw in raw_landscape(10)) {
        let l = build(&raw, None);
        let tree = enumerate_path_cycles(&l);
        let n = l.len();
        prop_assert!(tree.len() <= 2 * n - 1);
        prop_assert_eq!(&tree.node(tree.root()).members, &l.all_states());
        for x in 0..n {
            prop_assert!(tree.find(&StateSet::singleton(x)).is_some());
        }
        let nodes = tree.nodes();
        for (i, a) in nodes.iter().enumerate() {
            prop_assert!(is_path_cycle(&l, &a.members).unwrap());
            if a.members.len() > 1 {
                prop_assert!(a.resistance < a.depth);
                let top = l.max_energy(&a.members);
                for x in a.members.iter().filter(|&x| l.energy(x) == top) {
                    prop_assert_eq!(&sublevel_component(&l, x, top).unwrap(), &a.members);
                }
            }
            // trivial singletons are excluded: a plateau neighbour lies in U_{<=x}
            for x in a.members.iter().filter(|_| !a.trivial) {
                let u = sublevel_component(&l, x, l.energy(x)).unwrap();
                prop_assert!(u.is_subset(&a.members));
            }
            let mut union = StateSet::default();
            for &c in &a.children {
                prop_assert!(nodes[c].members.is_disjoint(&union));
                union = union.union(&nodes[c].members);
            }
            prop_assert!(union.is_subset(&a.members));
            for b in &nodes[i + 1..] {
                let (sa, sb) = (&a.members, &b.members);
                prop_assert!(sa.is_disjoint(sb) || sa.is_subset(sb) || sb.is_subset(sa));
                let touching = sa.iter().any(|x| sb.iter().any(|y| l.adjacent(x, y)));
                if sa.is_disjoint(sb) && touching {
                    prop_assert!(sa.len() == 1 || sb.len() == 1);
                }
            }
        }
    }

    #[test]
    fn sweep_matches_oracle(raw in raw_landscape(10)) {
        let l = build(&raw, None);
        prop_assert_eq!(enumerate_path_cycles(&l).member_sets(), brute_force_path_cycles(&l).unwrap());
    }

    #[test]
    fn equivalence_holds(raw in raw_landscape(10)) {
        let l = build(&raw, None);
        let report = verify_equivalence(&l).unwrap();
        prop_assert!(report.is_clean(), "{:?}", report);
    }

    #[test]
    fn trace_is_independent_of_declaration_order(
        raw in raw_landscape(9),
        shuffle in prop::collection::vec(any::<u32>(), 9),
    ) {
        let n = raw.energies.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (shuffle[i], i));
        let a = build(&raw, None);
        let b = build(&raw, Some(&order));
        let ta = run_decomposition(&a, None).unwrap();
        let tb = run_decomposition(&b, None).unwrap();
        prop_assert_eq!(trace_json(&a, &ta, true), trace_json(&b, &tb, true));
        prop_assert!(structural_violations(&b, &tb).is_empty());
    }

    #[test]
    fn canonical_json_round_trips(raw in raw_landscape(10)) {
        let l = build(&raw, None);
        let once = to_json(&l);
        let again = parse_landscape(&once).unwrap();
        prop_assert_eq!(&to_json(&again), &once);
    }
}

#[test]
fn oracle_and_sweep_agree_on_a_plateau_heavy_family() {
    // all energies in {0, 1} on a 10-cycle: maximal tie density
    let scale = EnergyScale::default();
    for mask in 0u32..(1 << 10) {
        let states = (0..10)
            .map(|i| (format!("s{i}"), Energy::from_units(((mask >> i) & 1) as i64, scale)))
            .collect();
        let edges = (0..10)
            .map(|i| EdgeSpec::new(format!("s{i}"), format!("s{}", (i + 1) % 10)))
            .collect();
        let l = Landscape::new(states, edges, scale).unwrap();
        let sweep: BTreeSet<StateSet> = enumerate_path_cycles(&l).member_sets();
        assert_eq!(sweep, brute_force_path_cycles(&l).unwrap(), "mask {mask:b}");
    }
}
