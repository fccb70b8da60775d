//! Completing partial colorings to rainbow-free colorings with a prescribed color count.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::coloring::{all_distinct, Color, Coloring, UNASSIGNED};
use crate::error::{Error, Result};
use crate::hypercube::{LineSet, LineTemplate};

use super::{verify_witness, Budget, Certificate, SearchConfig, SearchOutcome, Status};

/// An unassigned cell that every color would turn into a rainbow on one of `lines`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedCell {
    pub point: usize,
    /// Constraining lines whose admissible color sets have empty intersection;
    /// two lines with disjoint sets when such a pair exists.
    pub lines: Vec<LineTemplate>,
}

/// Colors the cell may take on a line whose other points are assigned with
/// pairwise distinct colors. `None` when the line does not constrain the cell.
fn admissible(colors: &[Color], lines: &LineSet, line: usize, cell: usize) -> Option<Vec<Color>> {
    let others: Vec<Color> = lines
        .points(line)
        .iter()
        .filter(|&&q| q != cell)
        .map(|&q| colors[q])
        .collect();
    if others.contains(&UNASSIGNED) || !all_distinct(&others) {
        return None;
    }
    let mut others = others;
    others.sort_unstable();
    Some(others)
}

fn intersect(a: &[Color], b: &[Color]) -> Vec<Color> {
    a.iter().copied().filter(|c| b.contains(c)).collect()
}

/// First free cell (by point index) with no admissible color.
pub fn find_forced_cell(partial: &Coloring) -> Option<ForcedCell> {
    let lines = LineSet::new(partial.shape());
    forced_cell(partial.colors(), &lines)
}

fn forced_cell(colors: &[Color], lines: &LineSet) -> Option<ForcedCell> {
    for cell in (0..colors.len()).filter(|&p| colors[p] == UNASSIGNED) {
        let constraints: Vec<(usize, Vec<Color>)> = lines
            .through(cell)
            .iter()
            .filter_map(|&l| admissible(colors, lines, l, cell).map(|set| (l, set)))
            .collect();
        if constraints.is_empty() {
            continue;
        }
        let mut common = constraints[0].1.clone();
        for (_, set) in &constraints[1..] {
            common = intersect(&common, set);
        }
        if !common.is_empty() {
            continue;
        }
        let mut witness = None;
        'pairs: for (i, (la, sa)) in constraints.iter().enumerate() {
            for (lb, sb) in &constraints[i + 1..] {
                if intersect(sa, sb).is_empty() {
                    witness = Some(vec![*la, *lb]);
                    break 'pairs;
                }
            }
        }
        let ids = witness.unwrap_or_else(|| {
            let mut chosen = Vec::new();
            let mut acc: Option<Vec<Color>> = None;
            for (l, set) in &constraints {
                let next = match &acc {
                    None => set.clone(),
                    Some(a) => intersect(a, set),
                };
                if acc.as_ref() != Some(&next) {
                    chosen.push(*l);
                }
                let done = next.is_empty();
                acc = Some(next);
                if done {
                    break;
                }
            }
            chosen
        });
        return Some(ForcedCell {
            point: cell,
            lines: ids.into_iter().map(|l| lines.template(l).clone()).collect(),
        });
    }
    None
}

/// Search state over dense color ids `1..`; ids above the input palette are fresh.
#[derive(Debug, Clone)]
struct Partial {
    colors: Vec<Color>,
    counts: Vec<usize>,
    distinct: usize,
    free: usize,
}

impl Partial {
    fn assign(&mut self, cell: usize, color: Color) {
        let c = color as usize;
        if c >= self.counts.len() {
            self.counts.resize(c + 1, 0);
        }
        if self.counts[c] == 0 {
            self.distinct += 1;
        }
        self.counts[c] += 1;
        self.colors[cell] = color;
        self.free -= 1;
    }

    fn next_fresh(&self) -> Color {
        self.counts.len().max(1) as Color
    }
}

enum Expansion {
    Solved,
    DeadEnd,
    Children(Vec<Partial>),
}

struct Completer<'a> {
    lines: &'a LineSet,
    target: usize,
}

impl Completer<'_> {
    fn consistent_at(&self, colors: &[Color], cell: usize) -> bool {
        self.lines.through(cell).iter().all(|&l| {
            let pts = self.lines.points(l);
            let cs: Vec<Color> = pts.iter().map(|&p| colors[p]).collect();
            cs.contains(&UNASSIGNED) || !all_distinct(&cs)
        })
    }

    fn expand(&self, state: &Partial) -> Expansion {
        if state.free == 0 {
            return if state.distinct == self.target {
                Expansion::Solved
            } else {
                Expansion::DeadEnd
            };
        }
        if state.distinct > self.target {
            return Expansion::DeadEnd;
        }
        // smallest constrained domain; unconstrained cells may still add fresh colors
        let mut best: Option<(usize, Vec<Color>)> = None;
        let mut open = 0usize;
        let mut first_open = None;
        for cell in (0..state.colors.len()).filter(|&p| state.colors[p] == UNASSIGNED) {
            let mut domain: Option<Vec<Color>> = None;
            for &l in self.lines.through(cell) {
                if let Some(set) = admissible(&state.colors, self.lines, l, cell) {
                    domain = Some(match domain {
                        None => set,
                        Some(d) => intersect(&d, &set),
                    });
                }
            }
            match domain {
                Some(d) if d.is_empty() => return Expansion::DeadEnd,
                Some(d) => {
                    if best.as_ref().is_none_or(|(_, b)| d.len() < b.len()) {
                        best = Some((cell, d));
                    }
                }
                None => {
                    open += 1;
                    first_open.get_or_insert(cell);
                }
            }
        }
        if state.distinct + open < self.target {
            return Expansion::DeadEnd;
        }
        let (cell, candidates) = match best {
            Some(b) => b,
            None => {
                let cell = first_open.expect("a free cell exists");
                let mut candidates = Vec::new();
                if state.distinct < self.target {
                    candidates.push(state.next_fresh());
                }
                candidates.extend(
                    (1..state.counts.len())
                        .filter(|&c| state.counts[c] > 0)
                        .map(|c| c as Color),
                );
                (cell, candidates)
            }
        };
        let children = candidates
            .into_iter()
            .filter_map(|color| {
                let mut child = state.clone();
                child.assign(cell, color);
                self.consistent_at(&child.colors, cell).then_some(child)
            })
            .collect();
        Expansion::Children(children)
    }
}

struct Run<'a> {
    completer: Completer<'a>,
    budget: Budget,
    found: AtomicBool,
    witness: Mutex<Option<Vec<Color>>>,
}

impl Run<'_> {
    fn dfs(&self, state: Partial, nodes: &mut u64) {
        *nodes += 1;
        if nodes.is_multiple_of(256) && !self.budget.charge(256) {
            return;
        }
        if self.found.load(Ordering::Relaxed) || self.budget.stopped() {
            return;
        }
        match self.completer.expand(&state) {
            Expansion::Solved => {
                let mut slot = self.witness.lock().expect("witness lock");
                if slot.is_none() {
                    *slot = Some(state.colors);
                }
                self.found.store(true, Ordering::Relaxed);
            }
            Expansion::DeadEnd => {}
            Expansion::Children(children) => {
                for child in children {
                    self.dfs(child, nodes);
                }
            }
        }
    }
}

/// Decides whether the unassigned cells of `partial` can be colored so that the
/// result is rainbow-free with exactly `total_colors` colors.
///
/// Candidate colors for a cell are the colors already in use plus one fresh
/// color, since unused colors are interchangeable.
pub fn complete(
    partial: &Coloring,
    total_colors: usize,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    config.validate()?;
    if total_colors == 0 {
        return Err(Error::InvalidArgument(
            "total_colors must be at least 1".into(),
        ));
    }
    let shape = partial.shape();
    let lines = LineSet::new(shape);
    let infeasible = |certificate| SearchOutcome {
        status: Status::Infeasible,
        best_value: total_colors,
        witness: None,
        nodes_explored: 0,
        certificate,
    };
    if let Some(line) = partial.assigned_rainbow_lines().into_iter().next() {
        return Ok(infeasible(Some(Certificate::RainbowLine(line))));
    }
    if let Some(cell) = forced_cell(partial.colors(), &lines) {
        return Ok(infeasible(Some(Certificate::ForcedCell(cell))));
    }

    // dense relabeling of the input palette
    let mut dense: BTreeMap<Color, Color> = BTreeMap::new();
    for &c in partial.colors().iter().filter(|&&c| c != UNASSIGNED) {
        let next = dense.len() as Color + 1;
        dense.entry(c).or_insert(next);
    }
    let mut start = Partial {
        colors: partial
            .colors()
            .iter()
            .map(|c| dense.get(c).copied().unwrap_or(UNASSIGNED))
            .collect(),
        counts: vec![0; dense.len() + 1],
        distinct: 0,
        free: partial.colors().len(),
    };
    for (p, c) in start.colors.clone().into_iter().enumerate() {
        if c != UNASSIGNED {
            start.colors[p] = UNASSIGNED;
            start.assign(p, c);
        }
    }

    let run = Run {
        completer: Completer {
            lines: &lines,
            target: total_colors,
        },
        budget: Budget::new(config),
        found: AtomicBool::new(false),
        witness: Mutex::new(None),
    };
    let mut nodes = 0u64;
    if config.worker_count == 1 {
        run.dfs(start, &mut nodes);
    } else {
        let mut level = vec![start];
        for _ in 0..8 {
            if level.len() >= config.worker_count * 16 || run.found.load(Ordering::Relaxed) {
                break;
            }
            let mut next = Vec::new();
            for state in level {
                nodes += 1;
                match run.completer.expand(&state) {
                    Expansion::Solved => {
                        run.witness
                            .lock()
                            .expect("witness lock")
                            .get_or_insert(state.colors);
                        run.found.store(true, Ordering::Relaxed);
                    }
                    Expansion::DeadEnd => {}
                    Expansion::Children(children) => next.extend(children),
                }
            }
            level = next;
        }
        let cursor = AtomicUsize::new(0);
        let counts: Vec<u64> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..config.worker_count)
                .map(|_| {
                    scope.spawn(|| {
                        let mut local = 0u64;
                        loop {
                            let i = cursor.fetch_add(1, Ordering::SeqCst);
                            if i >= level.len()
                                || run.found.load(Ordering::Relaxed)
                                || run.budget.stopped()
                            {
                                break;
                            }
                            run.dfs(level[i].clone(), &mut local);
                        }
                        local
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("completion worker panicked"))
                .collect()
        });
        nodes += counts.iter().sum::<u64>();
    }

    if let Some(colors) = run.witness.into_inner().expect("witness lock") {
        let original: BTreeMap<Color, Color> = dense.iter().map(|(&o, &d)| (d, o)).collect();
        let mut fresh = dense.keys().next_back().copied().unwrap_or(0);
        let mut fresh_map = BTreeMap::new();
        let mapped = colors
            .into_iter()
            .map(|d| match original.get(&d) {
                Some(&o) => o,
                None => *fresh_map.entry(d).or_insert_with(|| {
                    fresh += 1;
                    fresh
                }),
            })
            .collect();
        let witness = Coloring::new(shape, mapped)?;
        verify_witness(&witness, total_colors)?;
        return Ok(SearchOutcome {
            status: Status::Optimal,
            best_value: total_colors,
            witness: Some(witness),
            nodes_explored: nodes,
            certificate: None,
        });
    }
    let status = if run.budget.stopped() {
        Status::Timeout
    } else {
        Status::Infeasible
    };
    Ok(SearchOutcome {
        status,
        best_value: total_colors,
        witness: None,
        nodes_explored: nodes,
        certificate: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;
    use crate::hypercube::Shape;

    fn shape(k: u32, n: u32) -> Shape {
        Shape::new(k, n).unwrap()
    }

    #[test]
    fn total_input_is_its_own_completion() {
        let c = constructions::digit_position(shape(3, 3)).unwrap();
        let out = complete(&c, 8, &SearchConfig::default()).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert_eq!(out.witness.as_ref(), Some(&c));
        let wrong = complete(&c, 9, &SearchConfig::default()).unwrap();
        assert_eq!(wrong.status, Status::Infeasible);
    }

    #[test]
    fn rainbow_input_is_rejected_with_the_line() {
        let c = Coloring::new(shape(3, 2), vec![1, 2, 3, 0, 0, 0, 0, 0, 0]).unwrap();
        let out = complete(&c, 4, &SearchConfig::default()).unwrap();
        assert_eq!(out.status, Status::Infeasible);
        match out.certificate {
            Some(Certificate::RainbowLine(l)) => assert_eq!(l.to_string(), "1*"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn deleted_cells_are_refilled() {
        let full = constructions::singleton_set(shape(3, 2), &[0, 5, 7]).unwrap();
        let mut partial = full.clone();
        partial.set(4, UNASSIGNED);
        partial.set(8, UNASSIGNED);
        assert_eq!(find_forced_cell(&partial), None);
        let out = complete(&partial, 4, &SearchConfig::default()).unwrap();
        assert_eq!(out.status, Status::Optimal);
        let w = out.witness.unwrap();
        assert!(w.is_rainbow_free().unwrap());
        assert_eq!(w.distinct_colors(), 4);
        for p in (0..9).filter(|&p| p != 4 && p != 8) {
            assert_eq!(w.get(p), full.get(p));
        }
        // five colors would need a fifth singleton that [3]^2 cannot hold
        assert_eq!(
            complete(&partial, 5, &SearchConfig::default())
                .unwrap()
                .status,
            Status::Infeasible
        );
    }

    #[test]
    fn empty_cube_reaches_the_optimum_and_no_further() {
        let empty = Coloring::unassigned(shape(3, 2));
        let four = complete(&empty, 4, &SearchConfig::default()).unwrap();
        assert_eq!(four.status, Status::Optimal);
        assert_eq!(
            complete(&empty, 5, &SearchConfig::default())
                .unwrap()
                .status,
            Status::Infeasible
        );
        let threaded = complete(&empty, 5, &SearchConfig::default().with_workers(4)).unwrap();
        assert_eq!(threaded.status, Status::Infeasible);
    }

    #[test]
    fn forced_cell_detection() {
        // row 1 of [3]^2 is 1 2 _, column 3 is _ 3 4: cell (1,3) needs {1,2} and {3,4}
        let mut c = Coloring::unassigned(shape(3, 2));
        c.set(0, 1);
        c.set(1, 2);
        c.set(5, 3);
        c.set(8, 4);
        let forced = find_forced_cell(&c).unwrap();
        assert_eq!(forced.point, 2);
        let names: Vec<String> = forced.lines.iter().map(|l| l.to_string()).collect();
        assert_eq!(names, vec!["1*", "*3"]);
        assert!(matches!(
            complete(&c, 5, &SearchConfig::default())
                .unwrap()
                .certificate,
            Some(Certificate::ForcedCell(_))
        ));
        assert_eq!(find_forced_cell(&Coloring::uniform(shape(3, 2), 1)), None);
    }

    #[test]
    fn repeated_colors_impose_nothing() {
        let mut c = Coloring::unassigned(shape(3, 1));
        c.set(0, 5);
        c.set(1, 5);
        assert_eq!(find_forced_cell(&c), None);
        let out = complete(&c, 2, &SearchConfig::default()).unwrap();
        assert_eq!(out.status, Status::Optimal);
        assert_eq!(out.witness.unwrap().colors(), &[5, 5, 6]);
    }

    #[test]
    fn node_budget_times_out() {
        let empty = Coloring::unassigned(shape(3, 3));
        let cfg = SearchConfig {
            node_limit: Some(300),
            ..SearchConfig::default()
        };
        let out = complete(&empty, 11, &cfg).unwrap();
        assert_eq!(out.status, Status::Timeout);
    }
}
