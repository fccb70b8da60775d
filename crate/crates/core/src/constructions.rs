//! Explicit rainbow-free colorings.

use std::collections::BTreeSet;

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::hypercube::{LineSet, Shape};

/// Colors a point by where its symbols `1..=k-2` sit; symbols `k-1` and `k` are
/// indistinguishable. Uses exactly `(k-1)^n` colors.
///
/// On any line the points at star values `k-1` and `k` agree on every low-symbol
/// position, so they share a color.
pub fn digit_position(shape: Shape) -> Result<Coloring> {
    let k = shape.k();
    if k < 3 {
        return Err(Error::Unsupported(
            "digit-position coloring needs k >= 3".into(),
        ));
    }
    let radix = (k - 1) as usize;
    let high = k - 2;
    let mut coords = vec![0; shape.n() as usize];
    let colors = (0..shape.point_count())
        .map(|p| {
            shape.write_coords(p, &mut coords);
            let code = coords
                .iter()
                .fold(0usize, |acc, &v| acc * radix + (v - 1).min(high) as usize);
            code as Color + 1
        })
        .collect();
    Coloring::new(shape, colors)
}

/// Every point gets color 1.
pub fn monochromatic(shape: Shape) -> Coloring {
    Coloring::uniform(shape, 1)
}

/// Lifts a rainbow-free coloring of `[k]^(n-1)` to `[k]^n` along coordinate `coord`.
///
/// Layers `1..=k-2` receive disjoint copies of `base` (layer `i` uses the id block
/// `(i-1)*c+1 ..= i*c`); layers `k-1` and `k` share one further color. The result has
/// `(k-2)*c + 1` colors, where `c` is the number of colors of `base`.
pub fn stack_recursive(base: &Coloring, coord: u32) -> Result<Coloring> {
    let base_shape = base.shape();
    let k = base_shape.k();
    if k < 3 {
        return Err(Error::Unsupported("recursive stacking needs k >= 3".into()));
    }
    let target = Shape::new(k, base_shape.n() + 1)?;
    if coord < 1 || coord > target.n() {
        return Err(Error::InvalidArgument(format!(
            "stacking coordinate {coord} outside 1..={}",
            target.n()
        )));
    }
    if let Some(line) = base.rainbow_lines()?.into_iter().next() {
        return Err(Error::BaseNotRainbowFree(line));
    }
    let relabeled = base.canonical_relabel();
    let palette = relabeled.distinct_colors() as Color;
    let shared = (k - 2) * palette + 1;
    let t = (coord - 1) as usize;
    let mut coords = vec![0; target.n() as usize];
    let mut colors = Vec::with_capacity(target.point_count());
    for p in 0..target.point_count() {
        target.write_coords(p, &mut coords);
        let layer = coords[t];
        if layer > k - 2 {
            colors.push(shared);
            continue;
        }
        let mut reduced = coords.clone();
        reduced.remove(t);
        let local = relabeled.get(base_shape.index_of(&reduced)?);
        colors.push((layer - 1) * palette + local);
    }
    Coloring::new(target, colors)
}

/// Distinct colors on `points`, one dominant color everywhere else.
///
/// Rejects `points` if some line contains more than `k - 2` of them (that line
/// could be rainbow). The dominant color is `1`; the set receives `2, 3, ...` in
/// ascending point order.
pub fn singleton_set(shape: Shape, points: &[usize]) -> Result<Coloring> {
    let set: BTreeSet<usize> = points.iter().copied().collect();
    if set.len() != points.len() {
        return Err(Error::InvalidArgument(
            "singleton set contains repeated points".into(),
        ));
    }
    if let Some(&p) = set.iter().find(|&&p| p >= shape.point_count()) {
        return Err(Error::IndexOutOfRange {
            index: p as u64,
            count: shape.point_count(),
        });
    }
    let limit = shape.k() as usize - 2;
    let lines = LineSet::new(shape);
    for (id, pts) in lines.iter() {
        let count = pts.iter().filter(|p| set.contains(p)).count();
        if count > limit {
            return Err(Error::SingletonSetOverloaded {
                line: lines.template(id).clone(),
                count,
                limit,
            });
        }
    }
    let mut coloring = monochromatic(shape);
    for (i, &p) in set.iter().enumerate() {
        coloring.set(p, i as Color + 2);
    }
    Ok(coloring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn shape(k: u32, n: u32) -> Shape {
        Shape::new(k, n).unwrap()
    }

    #[test]
    fn digit_position_on_3x2_has_the_expected_classes() {
        let s = shape(3, 2);
        let c = digit_position(s).unwrap();
        let class = |a: &[u32]| c.get(s.index_of(a).unwrap());
        assert_eq!(c.distinct_colors(), 4);
        assert_eq!(class(&[1, 2]), class(&[1, 3]));
        assert_eq!(class(&[2, 1]), class(&[3, 1]));
        let big = class(&[2, 2]);
        assert!([[2, 3], [3, 2], [3, 3]].iter().all(|p| class(p) == big));
        let sizes = c.census().size_profile();
        assert_eq!(sizes, vec![4, 2, 2, 1]);
        assert!(c.is_rainbow_free().unwrap());
    }

    #[test]
    fn digit_position_examples() {
        let c33 = digit_position(shape(3, 3)).unwrap();
        assert_eq!(c33.distinct_colors(), 8);
        assert!(c33.is_rainbow_free().unwrap());
        let c42 = digit_position(shape(4, 2)).unwrap();
        assert_eq!(c42.distinct_colors(), 9);
        assert!(c42.is_rainbow_free().unwrap());
        assert!(matches!(
            digit_position(shape(2, 3)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn digit_position_puts_the_last_two_star_values_together() {
        for (k, n) in [(3, 3), (4, 3), (5, 2)] {
            let s = shape(k, n);
            let c = digit_position(s).unwrap();
            for t in s.lines() {
                let line = s.expand(&t).unwrap();
                let pts = line.points();
                assert_eq!(
                    c.get(pts[k as usize - 2]),
                    c.get(pts[k as usize - 1]),
                    "line {t}"
                );
            }
        }
    }

    #[test]
    fn stacking_small_bases() {
        let mono = monochromatic(shape(3, 2));
        let lifted = stack_recursive(&mono, 1).unwrap();
        assert_eq!(lifted.shape(), shape(3, 3));
        assert_eq!(lifted.distinct_colors(), 2);
        assert!(lifted.is_rainbow_free().unwrap());

        let base = digit_position(shape(3, 2)).unwrap();
        let lifted = stack_recursive(&base, 1).unwrap();
        assert_eq!(lifted.distinct_colors(), 5);
        assert!(lifted.is_rainbow_free().unwrap());
        assert_eq!(
            lifted.layer(1, 1).unwrap().canonical_relabel(),
            base.canonical_relabel()
        );

        let base = digit_position(shape(4, 2)).unwrap();
        for coord in 1..=3 {
            let lifted = stack_recursive(&base, coord).unwrap();
            assert_eq!(lifted.distinct_colors(), 2 * 9 + 1);
            assert!(lifted.is_rainbow_free().unwrap());
            for layer in 1..=2 {
                assert_eq!(
                    lifted.layer(coord, layer).unwrap().canonical_relabel(),
                    base.canonical_relabel()
                );
            }
        }
    }

    #[test]
    fn stacking_rejects_bad_input() {
        let rainbow = Coloring::new(shape(3, 1), vec![1, 2, 3]).unwrap();
        assert!(matches!(
            stack_recursive(&rainbow, 1),
            Err(Error::BaseNotRainbowFree(_))
        ));
        let mono = monochromatic(shape(3, 2));
        assert!(stack_recursive(&mono, 4).is_err());
        assert!(stack_recursive(&monochromatic(shape(2, 2)), 1).is_err());
    }

    #[test]
    fn singleton_sets() {
        let s = shape(3, 2);
        let c = singleton_set(s, &[0, 5, 7]).unwrap();
        assert_eq!(c.distinct_colors(), 4);
        assert!(c.is_minimal());
        assert!(c.is_rainbow_free().unwrap());
        assert_eq!(singleton_set(s, &[]).unwrap(), monochromatic(s));
        match singleton_set(s, &[0, 1]) {
            Err(Error::SingletonSetOverloaded { line, count, limit }) => {
                assert_eq!(line.to_string(), "1*");
                assert_eq!((count, limit), (2, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(singleton_set(s, &[0, 0]).is_err());
        assert!(singleton_set(s, &[9]).is_err());
    }
}
