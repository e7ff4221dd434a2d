//! Finite energy landscapes: states, energies and a symmetric connectivity.
//!
//! A [`Landscape`] is validated once on construction (symmetric `q`, row sums
//! at most one, connected support) and is immutable afterwards. States are
//! addressed internally by dense indices in input order; the string ids are
//! only used at the boundary.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;

use crate::energy::{Energy, EnergyScale};
use crate::error::{Error, Result};

/// Exact connectivity rate.
pub type Rate = Ratio<i128>;

/// A set of states of one landscape, kept as sorted, deduplicated indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StateSet(Vec<usize>);

impl StateSet {
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        StateSet(v)
    }

    pub fn singleton(x: usize) -> Self {
        StateSet(vec![x])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.0.iter().all(|&x| !other.contains(x))
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet::from_indices(self.iter().chain(other.iter()))
    }
}

impl FromIterator<usize> for StateSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        StateSet::from_indices(iter)
    }
}

/// One undirected edge as it was declared, kept for canonical output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct EdgeRecord {
    pub(crate) a: usize,
    pub(crate) b: usize,
    pub(crate) explicit_q: Option<Rate>,
}

/// Raw edge declaration prior to validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub a: String,
    pub b: String,
    /// `None` means "use the canonical rate 1/Δ".
    pub q: Option<Rate>,
}

impl EdgeSpec {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        EdgeSpec {
            a: a.into(),
            b: b.into(),
            q: None,
        }
    }

    pub fn with_rate(a: impl Into<String>, b: impl Into<String>, q: Rate) -> Self {
        EdgeSpec {
            a: a.into(),
            b: b.into(),
            q: Some(q),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Landscape {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    energy: Vec<Energy>,
    scale: EnergyScale,
    /// Per state, `(neighbor, q)` sorted by neighbor index.
    neighbors: Vec<Vec<(usize, Rate)>>,
    pub(crate) edges: Vec<EdgeRecord>,
}

impl Landscape {
    /// Validates and builds a landscape.
    ///
    /// Edges may be listed in either orientation (or both, with equal rates).
    /// Edges without an explicit rate get `1/Δ`, Δ being the maximum degree.
    pub fn new(
        states: Vec<(String, Energy)>,
        edges: Vec<EdgeSpec>,
        scale: EnergyScale,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::MalformedInput("no states".into()));
        }
        let mut ids = Vec::with_capacity(states.len());
        let mut energy = Vec::with_capacity(states.len());
        let mut index = HashMap::with_capacity(states.len());
        for (id, e) in states {
            if !e.is_finite() {
                return Err(Error::MalformedInput(format!("state `{id}` has infinite energy")));
            }
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::DuplicateState(id));
            }
            ids.push(id);
            energy.push(e);
        }
        let n = ids.len();

        // pair (lo, hi) -> (position in records, declared orientation, q)
        let mut seen: HashMap<(usize, usize), (usize, (usize, usize), Option<Rate>)> =
            HashMap::new();
        let mut records: Vec<EdgeRecord> = Vec::new();
        let mut reverse_listings: Vec<(usize, Option<Rate>)> = Vec::new();
        for spec in edges {
            let a = *index
                .get(&spec.a)
                .ok_or_else(|| Error::UnknownStateInEdge(spec.a.clone()))?;
            let b = *index
                .get(&spec.b)
                .ok_or_else(|| Error::UnknownStateInEdge(spec.b.clone()))?;
            if a == b {
                return Err(Error::MalformedInput(format!("self-edge on `{}`", spec.a)));
            }
            if let Some(q) = spec.q {
                if q <= Rate::from_integer(0) || q > Rate::from_integer(1) {
                    return Err(Error::MalformedInput(format!(
                        "rate of edge `{}`-`{}` must lie in (0, 1]",
                        spec.a, spec.b
                    )));
                }
            }
            let key = (a.min(b), a.max(b));
            match seen.get(&key) {
                None => {
                    seen.insert(key, (records.len(), (a, b), spec.q));
                    records.push(EdgeRecord {
                        a,
                        b,
                        explicit_q: spec.q,
                    });
                }
                Some(&(pos, orientation, _)) => {
                    if orientation == (a, b) {
                        return Err(Error::MalformedInput(format!(
                            "edge `{}`-`{}` listed twice",
                            spec.a, spec.b
                        )));
                    }
                    reverse_listings.push((pos, spec.q));
                }
            }
        }

        let mut degree = vec![0usize; n];
        for r in &records {
            degree[r.a] += 1;
            degree[r.b] += 1;
        }
        let max_degree = degree.iter().copied().max().unwrap_or(0).max(1);
        let canonical = Rate::new(1, max_degree as i128);
        let effective = |q: Option<Rate>| q.unwrap_or(canonical);

        for (pos, q) in reverse_listings {
            let r = &records[pos];
            if effective(r.explicit_q) != effective(q) {
                return Err(Error::AsymmetricEdge(ids[r.a].clone(), ids[r.b].clone()));
            }
        }

        let mut neighbors: Vec<Vec<(usize, Rate)>> = vec![Vec::new(); n];
        for r in &records {
            let q = effective(r.explicit_q);
            neighbors[r.a].push((r.b, q));
            neighbors[r.b].push((r.a, q));
        }
        for (x, row) in neighbors.iter_mut().enumerate() {
            row.sort_unstable_by_key(|&(y, _)| y);
            let total: Rate = row.iter().map(|&(_, q)| q).sum();
            if total > Rate::from_integer(1) {
                return Err(Error::RowSumExceedsOne(ids[x].clone()));
            }
        }

        let landscape = Landscape {
            ids,
            index,
            energy,
            scale,
            neighbors,
            edges: records,
        };
        let all = StateSet::from_indices(0..n);
        if !landscape.connected_within(&all) {
            return Err(Error::DisconnectedGraph);
        }
        Ok(landscape)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn scale(&self) -> EnergyScale {
        self.scale
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn state(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownState(id.to_string()))
    }

    /// Builds a [`StateSet`] from string ids.
    pub fn state_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<StateSet> {
        ids.iter()
            .map(|id| self.state(id.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(StateSet::from_indices)
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::from_indices(0..self.len())
    }

    pub fn energy(&self, x: usize) -> Energy {
        self.energy[x]
    }

    pub fn neighbors(&self, x: usize) -> &[(usize, Rate)] {
        &self.neighbors[x]
    }

    /// q(x, y) for x ≠ y; zero when the pair is not connected.
    pub fn rate(&self, x: usize, y: usize) -> Rate {
        self.neighbors[x]
            .binary_search_by_key(&y, |&(z, _)| z)
            .map(|i| self.neighbors[x][i].1)
            .unwrap_or_else(|_| Rate::from_integer(0))
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.neighbors[x]
            .binary_search_by_key(&y, |&(z, _)| z)
            .is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Human-readable rendering of a set, e.g. `{c,d,e,f}`.
    pub fn describe(&self, set: &StateSet) -> String {
        let mut names: Vec<&str> = set.iter().map(|x| self.id(x)).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(","))
    }

    /// Member ids of a set, sorted by id.
    pub fn sorted_ids(&self, set: &StateSet) -> Vec<String> {
        let mut names: Vec<String> = set.iter().map(|x| self.id(x).to_string()).collect();
        names.sort_unstable();
        names
    }

    fn check_set(&self, set: &StateSet) -> Result<()> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        match set.iter().find(|&x| x >= self.len()) {
            Some(x) => Err(Error::ForeignState(x)),
            None => Ok(()),
        }
    }

    /// ∂G: states outside `set` with a q-positive edge into it.
    pub fn exterior_boundary(&self, set: &StateSet) -> Result<StateSet> {
        self.check_set(set)?;
        Ok(self.boundary_unchecked(set))
    }

    pub(crate) fn boundary_unchecked(&self, set: &StateSet) -> StateSet {
        set.iter()
            .flat_map(|x| self.neighbors[x].iter().map(|&(y, _)| y))
            .filter(|&y| !set.contains(y))
            .collect()
    }

    /// F(G): members of minimal energy.
    pub fn ground(&self, set: &StateSet) -> Result<StateSet> {
        self.check_set(set)?;
        let floor = self.min_energy(set);
        Ok(set.iter().filter(|&x| self.energy[x] == floor).collect())
    }

    /// Minimum energy over a set; `+inf` for the empty set.
    pub fn min_energy(&self, set: &StateSet) -> Energy {
        set.iter()
            .map(|x| self.energy[x])
            .min()
            .unwrap_or(Energy::Infinite)
    }

    /// Maximum energy over a nonempty set.
    pub fn max_energy(&self, set: &StateSet) -> Energy {
        set.iter()
            .map(|x| self.energy[x])
            .max()
            .expect("max_energy of an empty set")
    }

    /// min over ∂G of H, `+inf` when the boundary is empty.
    pub fn boundary_floor(&self, set: &StateSet) -> Energy {
        self.min_energy(&self.boundary_unchecked(set))
    }

    /// Whether every pair of members is joined by a path inside the set.
    pub fn is_connected_subset(&self, set: &StateSet) -> Result<bool> {
        self.check_set(set)?;
        Ok(self.connected_within(set))
    }

    fn connected_within(&self, set: &StateSet) -> bool {
        let Some(start) = set.iter().next() else {
            return true;
        };
        let mut visited = vec![false; self.len()];
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.neighbors[x] {
                if !visited[y] && set.contains(y) {
                    visited[y] = true;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        reached == set.len()
    }

    /// Metropolis transition matrix at inverse temperature `beta > 0`.
    pub fn metropolis_kernel(&self, beta: f64) -> Result<TransitionMatrix> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::NonpositiveBeta(beta));
        }
        Ok(TransitionMatrix::build(self, beta))
    }
}

/// Row-sparse Metropolis kernel; the diagonal holds the row remainder.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    rows: Vec<Vec<(usize, f64)>>,
    diagonal: Vec<f64>,
}

impl TransitionMatrix {
    /// Evaluates the kernel for any `beta >= 0`; callers validate `beta`.
    pub(crate) fn build(landscape: &Landscape, beta: f64) -> Self {
        let scale = landscape.scale();
        let mut rows = Vec::with_capacity(landscape.len());
        let mut diagonal = Vec::with_capacity(landscape.len());
        for x in 0..landscape.len() {
            let hx = landscape.energy(x);
            let row: Vec<(usize, f64)> = landscape
                .neighbors(x)
                .iter()
                .map(|&(y, q)| {
                    let rise = (landscape.energy(y) - hx).positive_part().to_f64(scale);
                    let q = *q.numer() as f64 / *q.denom() as f64;
                    let p = if rise == 0.0 { q } else { q * (-beta * rise).exp() };
                    (y, p)
                })
                .collect();
            let off: f64 = row.iter().map(|&(_, p)| p).sum();
            diagonal.push((1.0 - off).max(0.0));
            rows.push(row);
        }
        TransitionMatrix { rows, diagonal }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        if x == y {
            return self.diagonal[x];
        }
        self.rows[x]
            .iter()
            .find(|&&(z, _)| z == y)
            .map_or(0.0, |&(_, p)| p)
    }

    /// Off-diagonal entries of row `x`.
    pub fn row(&self, x: usize) -> &[(usize, f64)] {
        &self.rows[x]
    }

    pub fn row_sum(&self, x: usize) -> f64 {
        self.diagonal[x] + self.rows[x].iter().map(|&(_, p)| p).sum::<f64>()
    }
}

impl fmt::Display for Landscape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "landscape with {} states and {} edges",
            self.len(),
            self.edges.len()
        )
    }
}
