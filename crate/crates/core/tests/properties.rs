use std::collections::BTreeSet;

use ahj::hypercube::Cell;
use ahj::search::{self, SearchConfig, Status};
use ahj::{Automorphism, Coloring, LineSet, LineTemplate, Shape};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = Shape> {
    (2..=5u32, 1..=4u32).prop_map(|(k, n)| Shape::new(k, n).unwrap())
}

fn template(shape: Shape) -> impl Strategy<Value = LineTemplate> {
    let k = shape.k();
    proptest::collection::vec(0..=k, shape.n() as usize)
        .prop_filter("needs a star", move |v| v.contains(&k))
        .prop_map(move |v| {
            let cells = v
                .into_iter()
                .map(|c| {
                    if c == k {
                        Cell::Star
                    } else {
                        Cell::Symbol(c + 1)
                    }
                })
                .collect();
            LineTemplate::new(cells).unwrap()
        })
}

fn automorphism(shape: Shape) -> impl Strategy<Value = Automorphism> {
    let coords: Vec<usize> = (0..shape.n() as usize).collect();
    let symbols: Vec<u32> = (1..=shape.k()).collect();
    (Just(coords).prop_shuffle(), Just(symbols).prop_shuffle())
        .prop_map(|(c, s)| Automorphism::new(c, s).unwrap())
}

fn coloring(max_colors: u32) -> impl Strategy<Value = Coloring> {
    (2..=3u32, 1..=3u32).prop_flat_map(move |(k, n)| {
        let shape = Shape::new(k, n).unwrap();
        proptest::collection::vec(1..=max_colors, shape.point_count())
            .prop_map(move |colors| Coloring::new(shape, colors).unwrap())
    })
}

fn line_sets(shape: &Shape) -> BTreeSet<Vec<usize>> {
    LineSet::new(*shape)
        .iter()
        .map(|(_, p)| {
            let mut v = p.to_vec();
            v.sort_unstable();
            v
        })
        .collect()
}

/// Tries every extension of `partial`: existing colors or fresh ones in first-use order.
fn brute_force_completable(partial: &Coloring, total: usize) -> bool {
    fn walk(
        c: &mut Coloring,
        lines: &LineSet,
        free: &[usize],
        next_fresh: u32,
        total: usize,
    ) -> bool {
        let Some((&p, rest)) = free.split_first() else {
            return c.distinct_colors() == total;
        };
        for color in 1..=next_fresh {
            c.set(p, color);
            let rainbow = lines.through(p).iter().any(|&l| {
                let pts = lines.points(l);
                let colors: BTreeSet<u32> = pts.iter().map(|&q| c.get(q)).collect();
                !colors.contains(&0) && colors.len() == pts.len()
            });
            let fresh = if color == next_fresh {
                next_fresh + 1
            } else {
                next_fresh
            };
            if !rainbow && walk(c, lines, rest, fresh, total) {
                return true;
            }
        }
        c.set(p, 0);
        false
    }
    let shape = partial.shape();
    let lines = LineSet::new(shape);
    if !partial.assigned_rainbow_lines().is_empty() {
        return false;
    }
    let free: Vec<usize> = (0..shape.point_count())
        .filter(|&p| partial.get(p) == 0)
        .collect();
    let max = partial.colors().iter().copied().max().unwrap_or(0);
    walk(&mut partial.clone(), &lines, &free, max + 1, total)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn line_count_formula(shape in shape()) {
        let (k, n) = (shape.k() as u128, shape.n());
        prop_assert_eq!(shape.lines().count() as u128, (k + 1).pow(n) - k.pow(n));
        prop_assert_eq!(shape.line_count(), (k + 1).pow(n) - k.pow(n));
    }

    #[test]
    fn lines_cross_layers_completely_or_not_at_all(
        (shape, t) in shape().prop_flat_map(|s| (Just(s), template(s)))
    ) {
        let line = shape.expand(&t).unwrap();
        for (pos, cell) in t.cells().iter().enumerate() {
            let symbols: BTreeSet<u32> =
                line.points().iter().map(|&p| shape.point(p).unwrap().coords()[pos]).collect();
            let want = if *cell == Cell::Star { shape.k() as usize } else { 1 };
            prop_assert_eq!(symbols.len(), want);
            for s in 1..=shape.k() {
                let layer: BTreeSet<usize> = shape.layer(pos as u32 + 1, s).unwrap().into_iter().collect();
                let inside = line.points().iter().filter(|p| layer.contains(p)).count();
                prop_assert!(inside == 1 || inside == 0 || inside == shape.k() as usize);
            }
        }
    }

    #[test]
    fn automorphisms_preserve_lines(
        (shape, g) in shape().prop_filter("small", |s| s.point_count() <= 256).prop_flat_map(|s| (Just(s), automorphism(s)))
    ) {
        let lines = line_sets(&shape);
        let table = g.point_table(&shape);
        let image: BTreeSet<Vec<usize>> = lines
            .iter()
            .map(|l| {
                let mut v: Vec<usize> = l.iter().map(|&p| table[p]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        prop_assert_eq!(image, lines);
    }

    #[test]
    fn canonical_forms_are_idempotent(c in coloring(5)) {
        let relabeled = c.canonical_relabel();
        prop_assert_eq!(relabeled.canonical_relabel(), relabeled.clone());
        let orbit = c.orbit_canonical_form().unwrap();
        prop_assert_eq!(orbit.orbit_canonical_form().unwrap(), orbit.clone());
        prop_assert_eq!(c.is_rainbow_free().unwrap(), orbit.is_rainbow_free().unwrap());
        prop_assert_eq!(c.distinct_colors(), orbit.distinct_colors());
    }

    #[test]
    fn orbit_form_is_symmetry_invariant(
        (c, g) in coloring(4).prop_flat_map(|c| { let s = c.shape(); (Just(c), automorphism(s)) })
    ) {
        let shape = c.shape();
        let table = g.point_table(&shape);
        let mut moved = Coloring::unassigned(shape);
        for (p, &image) in table.iter().enumerate() {
            moved.set(image, c.get(p));
        }
        prop_assert_eq!(moved.orbit_canonical_form().unwrap(), c.orbit_canonical_form().unwrap());
    }

    #[test]
    fn text_format_preserves_colorings(c in coloring(12)) {
        prop_assert_eq!(Coloring::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn completion_agrees_with_brute_force(
        cells in proptest::collection::vec(0..=4u32, 9),
        total in 1..=5usize,
    ) {
        let partial = Coloring::new(Shape::new(3, 2).unwrap(), cells).unwrap();
        let out = search::complete(&partial, total, &SearchConfig::default()).unwrap();
        match out.status {
            Status::Optimal => {
                let w = out.witness.unwrap();
                prop_assert!(w.is_rainbow_free().unwrap());
                prop_assert_eq!(w.distinct_colors(), total);
                for p in 0..9 {
                    if partial.get(p) != 0 {
                        prop_assert_eq!(w.get(p), partial.get(p));
                    }
                }
            }
            Status::Infeasible => prop_assert!(!brute_force_completable(&partial, total)),
            other => prop_assert!(false, "unexpected status {other}"),
        }
    }
}
