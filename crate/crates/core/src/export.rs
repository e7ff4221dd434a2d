//! Structured exports of cycle trees, decomposition traces, equivalence
//! reports and simulation statistics.
//!
//! Sets are written as sorted lists of state ids and energies as exact
//! decimal strings, with `"inf"` for `+inf`. Lists of sets are sorted by
//! size and then by their id lists, so outputs do not depend on the order in
//! which states were declared.

use std::fmt::Write as _;

use serde::Serialize;

use crate::energy::Energy;
use crate::equivalence::{EquivalenceReport, IdentityViolation};
use crate::graph_cycles::{DecompositionTrace, PartitionLevel};
use crate::landscape::{Landscape, StateSet};
use crate::path_cycles::CycleTree;
use crate::simulation::{ExitWindowRow, VisitRow};

pub const FORMAT_VERSION: u32 = 1;

fn ids(l: &Landscape, set: &StateSet) -> Vec<String> {
    l.sorted_ids(set)
}

fn energy(l: &Landscape, e: Energy) -> String {
    l.scale().format(e)
}

fn canonical_key(l: &Landscape, set: &StateSet) -> (usize, Vec<String>) {
    (set.len(), ids(l, set))
}

fn sorted_sets(l: &Landscape, sets: &[StateSet]) -> Vec<Vec<String>> {
    let mut keys: Vec<(usize, Vec<String>)> = sets.iter().map(|s| canonical_key(l, s)).collect();
    keys.sort();
    keys.into_iter().map(|(_, v)| v).collect()
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("export serializes");
    out.push('\n');
    out
}

#[derive(Serialize)]
struct TreeDocument {
    format_version: u32,
    nodes: Vec<TreeNode>,
}

#[derive(Serialize)]
struct TreeNode {
    members: Vec<String>,
    gamma: String,
    gamma_tilde: String,
    ground: Vec<String>,
    boundary_floor: String,
    trivial: bool,
    parent_index: Option<usize>,
}

/// Node order of the canonical tree export, as tree node ids.
fn tree_order(l: &Landscape, tree: &CycleTree) -> Vec<usize> {
    let mut order: Vec<usize> = (0..tree.len()).collect();
    order.sort_by_key(|&id| canonical_key(l, &tree.node(id).members));
    order
}

pub fn cycle_tree_json(l: &Landscape, tree: &CycleTree) -> String {
    let order = tree_order(l, tree);
    let mut position = vec![0usize; tree.len()];
    for (pos, &id) in order.iter().enumerate() {
        position[id] = pos;
    }
    let nodes = order
        .iter()
        .map(|&id| {
            let node = tree.node(id);
            TreeNode {
                members: ids(l, &node.members),
                gamma: energy(l, node.depth),
                gamma_tilde: energy(l, node.resistance),
                ground: ids(l, &node.ground),
                boundary_floor: energy(l, node.boundary_floor),
                trivial: node.trivial,
                parent_index: node.parent.map(|p| position[p]),
            }
        })
        .collect();
    pretty(&TreeDocument {
        format_version: FORMAT_VERSION,
        nodes,
    })
}

fn dot_escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The cycle hierarchy in Graphviz DOT: one node per cycle, edges from parent
/// to child.
pub fn cycle_tree_dot(l: &Landscape, tree: &CycleTree) -> String {
    let order = tree_order(l, tree);
    let mut position = vec![0usize; tree.len()];
    for (pos, &id) in order.iter().enumerate() {
        position[id] = pos;
    }
    let mut out = String::from("digraph cycles {\n  node [shape=box];\n");
    for (pos, &id) in order.iter().enumerate() {
        let node = tree.node(id);
        let label = format!(
            "{}\\nΓ={}, Γ̃={}",
            dot_escape(&l.describe(&node.members)),
            energy(l, node.depth),
            energy(l, node.resistance)
        );
        let _ = writeln!(out, "  n{pos} [label=\"{label}\"];");
    }
    for &id in &order {
        let mut children: Vec<usize> = tree.node(id).children.iter().map(|&c| position[c]).collect();
        children.sort_unstable();
        for c in children {
            let _ = writeln!(out, "  n{} -> n{c};", position[id]);
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct CostEntry {
    from: Vec<String>,
    to: Vec<String>,
    value: String,
}

#[derive(Serialize)]
struct HeightEntry {
    class: Vec<String>,
    value: String,
}

#[derive(Serialize)]
struct IterationDocument {
    k: usize,
    classes: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cost: Option<Vec<CostEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    renormalized_cost: Option<Vec<CostEntry>>,
    exit_height: Vec<HeightEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    merge_height: Option<Vec<HeightEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    merged: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minimal: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct CycleEntry {
    members: Vec<String>,
    exit_height: String,
    merge_height: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    merge_height_at_creation: Option<String>,
    first_level: usize,
    last_level: usize,
}

#[derive(Serialize)]
struct TraceDocument {
    format_version: u32,
    n_s: usize,
    iterations: Vec<IterationDocument>,
    cycles: Vec<CycleEntry>,
}

fn cost_entries(
    l: &Landscape,
    level: &PartitionLevel,
    entries: impl Iterator<Item = ((usize, usize), Energy)>,
) -> Vec<CostEntry> {
    let mut out: Vec<((usize, Vec<String>), (usize, Vec<String>), String)> = entries
        .map(|((a, b), v)| {
            (
                canonical_key(l, &level.classes()[a]),
                canonical_key(l, &level.classes()[b]),
                energy(l, v),
            )
        })
        .collect();
    out.sort();
    out.into_iter()
        .map(|((_, from), (_, to), value)| CostEntry { from, to, value })
        .collect()
}

fn height_entries(l: &Landscape, level: &PartitionLevel, f: impl Fn(usize) -> Energy) -> Vec<HeightEntry> {
    let mut out: Vec<((usize, Vec<String>), String)> = (0..level.classes().len())
        .map(|c| (canonical_key(l, &level.classes()[c]), energy(l, f(c))))
        .collect();
    out.sort();
    out.into_iter()
        .map(|((_, class), value)| HeightEntry { class, value })
        .collect()
}

/// The decomposition trace. With `with_costs`, every finite entry of `V^k`
/// and `V_*^k` is included.
pub fn trace_json(l: &Landscape, trace: &DecompositionTrace, with_costs: bool) -> String {
    let iterations = trace
        .levels()
        .iter()
        .map(|level| {
            let k = level.index;
            let step = trace.steps().get(k);
            IterationDocument {
                k,
                classes: sorted_sets(l, level.classes()),
                cost: with_costs.then(|| cost_entries(l, level, level.finite_costs())),
                renormalized_cost: with_costs
                    .then(|| cost_entries(l, level, level.finite_renormalized_costs())),
                exit_height: height_entries(l, level, |c| level.exit_height(c)),
                merge_height: (k > 0).then(|| {
                    height_entries(l, level, |c| level.merge_height(c).expect("defined for k > 0"))
                }),
                merged: step.map(|s| sorted_sets(l, &s.merged)),
                minimal: step.map(|s| sorted_sets(l, &s.minimal)),
            }
        })
        .collect();
    let mut cycles: Vec<CycleEntry> = trace
        .cycles()
        .iter()
        .map(|c| CycleEntry {
            members: ids(l, &c.members),
            exit_height: energy(l, c.exit_height),
            merge_height: energy(l, c.merge_height),
            merge_height_at_creation: c.merge_height_at_creation.map(|e| energy(l, e)),
            first_level: c.first_level,
            last_level: c.last_level,
        })
        .collect();
    cycles.sort_by(|a, b| (a.members.len(), &a.members).cmp(&(b.members.len(), &b.members)));
    pretty(&TraceDocument {
        format_version: FORMAT_VERSION,
        n_s: trace.n_s(),
        iterations,
        cycles,
    })
}

#[derive(Serialize)]
struct ViolationEntry {
    cycle: Vec<String>,
    reported: String,
    expected: String,
}

#[derive(Serialize)]
struct ConditionsDocument {
    iteration: usize,
    path_cycle: bool,
    singleton_costs: bool,
    exit_height: bool,
    merge_height: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<String>,
}

#[derive(Serialize)]
struct ReportDocument {
    format_version: u32,
    set_equal: bool,
    clean: bool,
    path_cycle_count: usize,
    graph_cycle_count: usize,
    only_path_cycles: Vec<Vec<String>>,
    only_graph_cycles: Vec<Vec<String>>,
    he_identity_violations: Vec<ViolationEntry>,
    hm_identity_violations: Vec<ViolationEntry>,
    order_violations: Vec<Vec<String>>,
    structural_violations: Vec<String>,
    conditions_log: Vec<ConditionsDocument>,
    notes: Vec<String>,
}

fn violations(l: &Landscape, v: &[IdentityViolation]) -> Vec<ViolationEntry> {
    v.iter()
        .map(|v| ViolationEntry {
            cycle: ids(l, &v.cycle),
            reported: energy(l, v.reported),
            expected: energy(l, v.expected),
        })
        .collect()
}

fn report_document(l: &Landscape, r: &EquivalenceReport) -> ReportDocument {
    ReportDocument {
        format_version: FORMAT_VERSION,
        set_equal: r.set_equal,
        clean: r.is_clean(),
        path_cycle_count: r.path_cycle_count,
        graph_cycle_count: r.graph_cycle_count,
        only_path_cycles: sorted_sets(l, &r.only_path_cycles),
        only_graph_cycles: sorted_sets(l, &r.only_graph_cycles),
        he_identity_violations: violations(l, &r.he_identity_violations),
        hm_identity_violations: violations(l, &r.hm_identity_violations),
        order_violations: sorted_sets(l, &r.order_violations),
        structural_violations: r.structural_violations.clone(),
        conditions_log: r
            .conditions_log
            .iter()
            .map(|c| ConditionsDocument {
                iteration: c.iteration,
                path_cycle: c.path_cycle,
                singleton_costs: c.singleton_costs,
                exit_height: c.exit_height,
                merge_height: c.merge_height,
                failures: c.failures.clone(),
            })
            .collect(),
        notes: r.notes.clone(),
    }
}

pub fn report_json(l: &Landscape, report: &EquivalenceReport) -> String {
    pretty(&report_document(l, report))
}

/// Report as a JSON value, for embedding into campaign summaries.
pub fn report_value(l: &Landscape, report: &EquivalenceReport) -> serde_json::Value {
    serde_json::to_value(report_document(l, report)).expect("report serializes")
}

/// One row of the simulation export.
#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct StatsRow {
    pub check: &'static str,
    pub beta: f64,
    pub start: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visit: Option<String>,
    pub replicas: usize,
    pub censored: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub window_fraction: f64,
    pub log_median_over_beta: Option<f64>,
}

pub fn exit_rows(l: &Landscape, rows: &[ExitWindowRow]) -> Vec<StatsRow> {
    rows.iter()
        .map(|r| StatsRow {
            check: "exit_window",
            beta: r.beta,
            start: l.id(r.start).to_string(),
            visit: None,
            replicas: r.stats.replicas,
            censored: r.stats.censored_count,
            mean: r.stats.mean,
            median: r.stats.median,
            window_fraction: r.window_fraction,
            log_median_over_beta: r.stats.log_median_over_beta(),
        })
        .collect()
}

pub fn visit_rows(l: &Landscape, rows: &[VisitRow]) -> Vec<StatsRow> {
    rows.iter()
        .map(|r| StatsRow {
            check: "visit_before_exit",
            beta: r.beta,
            start: l.id(r.start).to_string(),
            visit: Some(l.id(r.visit).to_string()),
            replicas: r.stats.replicas,
            censored: r.stats.censored_count,
            mean: r.stats.mean,
            median: r.stats.median,
            window_fraction: r.fraction,
            log_median_over_beta: r.stats.log_median_over_beta(),
        })
        .collect()
}

#[derive(Serialize)]
struct StatsDocument<'a> {
    format_version: u32,
    cycle: Vec<String>,
    epsilon: f64,
    seed: u64,
    rows: &'a [StatsRow],
}

pub fn stats_json(l: &Landscape, cycle: &StateSet, epsilon: f64, seed: u64, rows: &[StatsRow]) -> String {
    pretty(&StatsDocument {
        format_version: FORMAT_VERSION,
        cycle: ids(l, cycle),
        epsilon,
        seed,
        rows,
    })
}

/// Tab-separated rows with a header line.
pub fn stats_tsv(rows: &[StatsRow]) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |v| v.to_string());
    let mut out = String::from(
        "check\tbeta\tstart\tvisit\treplicas\tcensored\tmean\tmedian\twindow_fraction\tlog_median_over_beta\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.check,
            r.beta,
            r.start,
            r.visit.as_deref().unwrap_or("NA"),
            r.replicas,
            r.censored,
            opt(r.mean),
            opt(r.median),
            r.window_fraction,
            opt(r.log_median_over_beta)
        );
    }
    out
}
