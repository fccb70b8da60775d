//! Maximum rainbow-free color count by branch-and-bound over point merges.
//!
//! A total coloring is rainbow-free iff its color classes give every line two
//! points in one class. Starting from singletons, each step takes the first
//! unsatisfied line and merges one of its point pairs. The number of colors is
//! `k^n - merges`, so maximizing colors is minimizing merges.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::coloring::{Color, Coloring};
use crate::constructions;
use crate::error::Result;
use crate::hypercube::{LineSet, Shape};

use super::{verify_witness, Budget, SearchConfig, SearchOutcome, Status};

/// A partition of the points, stored as a flattened union-find (every point
/// points straight at its class representative, the least index of the class).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeState {
    class: Vec<u32>,
    merge_count: usize,
    /// Every line below this id is satisfied.
    cursor: usize,
}

impl MergeState {
    pub fn new(shape: Shape) -> Self {
        MergeState {
            class: (0..shape.point_count() as u32).collect(),
            merge_count: 0,
            cursor: 0,
        }
    }

    pub fn find(&self, point: usize) -> usize {
        self.class[point] as usize
    }

    pub fn same_class(&self, a: usize, b: usize) -> bool {
        self.class[a] == self.class[b]
    }

    /// Joins the classes of `a` and `b`; returns false if they were already joined.
    pub fn merge(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.class[a], self.class[b]);
        if ra == rb {
            return false;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        for c in self.class.iter_mut() {
            if *c == drop {
                *c = keep;
            }
        }
        self.merge_count += 1;
        true
    }

    pub fn merge_count(&self) -> usize {
        self.merge_count
    }

    pub fn class_count(&self) -> usize {
        self.class.len() - self.merge_count
    }

    /// A line is satisfied when two of its points share a class.
    pub fn is_satisfied(&self, points: &[usize]) -> bool {
        (1..points.len()).any(|i| {
            points[..i]
                .iter()
                .any(|&q| self.class[q] == self.class[points[i]])
        })
    }

    /// First unsatisfied line id, advancing the internal cursor past satisfied prefixes.
    pub fn first_unsatisfied(&mut self, lines: &LineSet) -> Option<usize> {
        while self.cursor < lines.len() {
            if !self.is_satisfied(lines.points(self.cursor)) {
                return Some(self.cursor);
            }
            self.cursor += 1;
        }
        None
    }

    /// Colors numbered `1, 2, ...` by class in order of first occurrence.
    pub fn to_coloring(&self, shape: Shape) -> Coloring {
        let colors = self.class.iter().map(|&c| c as Color + 1).collect();
        Coloring::new(shape, colors)
            .expect("state sized for shape")
            .canonical_relabel()
    }
}

/// Size of a greedy family of unsatisfied lines whose class sets are pairwise
/// disjoint, scanned in enumeration order.
///
/// Each merge joins two classes and so can satisfy at most one line of such a
/// family; the family size is a lower bound on the merges still needed.
pub fn lower_bound_unsatisfied(state: &MergeState, lines: &LineSet) -> usize {
    let mut used = vec![false; state.class.len()];
    greedy_disjoint(state, lines, &mut used)
}

fn greedy_disjoint(state: &MergeState, lines: &LineSet, used: &mut [bool]) -> usize {
    used.iter_mut().for_each(|u| *u = false);
    let mut count = 0;
    for id in state.cursor..lines.len() {
        let pts = lines.points(id);
        if pts.iter().any(|&p| used[state.class[p] as usize]) || state.is_satisfied(pts) {
            continue;
        }
        for &p in pts {
            used[state.class[p] as usize] = true;
        }
        count += 1;
    }
    count
}

/// Best incumbent known before searching: digit-position for `k >= 3`, else monochromatic.
fn initial_incumbent(shape: Shape) -> Coloring {
    constructions::digit_position(shape).unwrap_or_else(|_| constructions::monochromatic(shape))
}

struct Shared<'a> {
    lines: &'a LineSet,
    best_merges: AtomicUsize,
    witness: Mutex<Option<MergeState>>,
    budget: Budget,
}

impl Shared<'_> {
    fn offer(&self, state: &MergeState) {
        let merges = state.merge_count();
        let mut slot = self.witness.lock().expect("witness lock");
        if merges < self.best_merges.load(Ordering::SeqCst) {
            self.best_merges.store(merges, Ordering::SeqCst);
            *slot = Some(state.clone());
        }
    }
}

struct Worker<'a, 'b> {
    shared: &'b Shared<'a>,
    scratch: Vec<bool>,
    nodes: u64,
    unbilled: u64,
}

impl Worker<'_, '_> {
    fn dfs(&mut self, mut state: MergeState) {
        self.nodes += 1;
        self.unbilled += 1;
        if self.unbilled == 64 {
            self.unbilled = 0;
            if !self.shared.budget.charge(64) {
                return;
            }
        } else if self.shared.budget.stopped() {
            return;
        }
        let lines = self.shared.lines;
        let Some(line) = state.first_unsatisfied(lines) else {
            self.shared.offer(&state);
            return;
        };
        let bound = greedy_disjoint(&state, lines, &mut self.scratch);
        if state.merge_count() + bound >= self.shared.best_merges.load(Ordering::Relaxed) {
            return;
        }
        let pts = lines.points(line);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let mut child = state.clone();
                child.merge(pts[i], pts[j]);
                self.dfs(child);
            }
        }
    }
}

/// Point pairs of the root line, one per orbit of the line's stabilizer.
fn root_pairs(shape: Shape, points: &[usize], symmetry: bool) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            pairs.push((points[i], points[j]));
        }
    }
    if !symmetry {
        return Ok(pairs);
    }
    let group = match shape.automorphisms() {
        Ok(g) => g,
        Err(_) => return Ok(pairs),
    };
    let mut line_set: Vec<usize> = points.to_vec();
    line_set.sort_unstable();
    let mut keep = Vec::new();
    for &(a, b) in &pairs {
        let minimal = group.iter().all(|g| {
            let mut image: Vec<usize> = points.iter().map(|&p| g.apply(&shape, p)).collect();
            image.sort_unstable();
            if image != line_set {
                return true;
            }
            let (x, y) = (g.apply(&shape, a), g.apply(&shape, b));
            (x.min(y), x.max(y)) >= (a, b)
        });
        if minimal {
            keep.push((a, b));
        }
    }
    Ok(keep)
}

/// Expands the tree breadth-first until there are enough subtrees to share.
fn frontier(
    lines: &LineSet,
    roots: Vec<MergeState>,
    target: usize,
) -> (Vec<MergeState>, Vec<MergeState>) {
    let mut level = roots;
    let mut solved = Vec::new();
    for _ in 0..6 {
        if level.len() >= target {
            break;
        }
        let mut next = Vec::new();
        for mut state in level {
            match state.first_unsatisfied(lines) {
                None => solved.push(state),
                Some(line) => {
                    let pts = lines.points(line);
                    for i in 0..pts.len() {
                        for j in i + 1..pts.len() {
                            let mut child = state.clone();
                            child.merge(pts[i], pts[j]);
                            next.push(child);
                        }
                    }
                }
            }
        }
        level = next;
    }
    (level, solved)
}

/// Maximum number of colors in a rainbow-free coloring of `shape`.
///
/// With `Status::Optimal`, `ah(k, n) = best_value + 1`. When a budget runs out the
/// best witness found so far is returned as `Status::FeasibleOnly`.
pub fn max_rf_colors(shape: Shape, config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let lines = LineSet::new(shape);
    let incumbent = initial_incumbent(shape);
    let n = shape.point_count();
    let shared = Shared {
        lines: &lines,
        best_merges: AtomicUsize::new(n - incumbent.distinct_colors()),
        witness: Mutex::new(None),
        budget: Budget::new(config),
    };

    let mut root = MergeState::new(shape);
    let mut nodes = 1u64;
    if let Some(first) = root.first_unsatisfied(&lines) {
        let roots: Vec<MergeState> =
            root_pairs(shape, lines.points(first), config.symmetry_reduction)?
                .into_iter()
                .map(|(a, b)| {
                    let mut child = root.clone();
                    child.merge(a, b);
                    child
                })
                .collect();
        if config.worker_count == 1 {
            let mut worker = Worker {
                shared: &shared,
                scratch: vec![false; n],
                nodes: 0,
                unbilled: 0,
            };
            for child in roots {
                worker.dfs(child);
            }
            nodes += worker.nodes;
        } else {
            let (work, solved) = frontier(&lines, roots, config.worker_count * 32);
            for s in &solved {
                shared.offer(s);
            }
            let next = AtomicUsize::new(0);
            let counts: Vec<u64> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..config.worker_count)
                    .map(|_| {
                        scope.spawn(|| {
                            let mut worker = Worker {
                                shared: &shared,
                                scratch: vec![false; n],
                                nodes: 0,
                                unbilled: 0,
                            };
                            loop {
                                let i = next.fetch_add(1, Ordering::SeqCst);
                                if i >= work.len() || shared.budget.stopped() {
                                    break;
                                }
                                worker.dfs(work[i].clone());
                            }
                            worker.nodes
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("search worker panicked"))
                    .collect()
            });
            nodes += counts.iter().sum::<u64>();
        }
    } else {
        shared.offer(&root);
    }

    let witness = match shared.witness.into_inner().expect("witness lock") {
        Some(state) => state.to_coloring(shape),
        None => incumbent.canonical_relabel(),
    };
    let best_value = witness.distinct_colors();
    verify_witness(&witness, best_value)?;
    let status = if shared.budget.stopped() {
        Status::FeasibleOnly
    } else {
        Status::Optimal
    };
    Ok(SearchOutcome {
        status,
        best_value,
        witness: Some(witness),
        nodes_explored: nodes,
        certificate: None,
    })
}
