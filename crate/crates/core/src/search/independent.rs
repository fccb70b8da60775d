//! Line-independent point sets of `[3]^n` and the minimal colorings they induce.
//!
//! For `k = 3` a minimal coloring is rainbow-free exactly when its singleton
//! points are pairwise non-collinear: a line with two singletons is rainbow, a
//! line with at most one has two dominant points.

use crate::coloring::Coloring;
use crate::constructions;
use crate::error::{Error, Result};
use crate::hypercube::Shape;

/// Fixed-width bitset over point indices.
#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count_from(&self, start: usize) -> usize {
        let (word, bit) = (start / 64, start % 64);
        if word >= self.0.len() {
            return 0;
        }
        let head = (self.0[word] >> bit).count_ones() as usize;
        head + self.0[word + 1..]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
}

fn require_k3(shape: Shape) -> Result<()> {
    if shape.k() != 3 {
        return Err(Error::Unsupported(format!(
            "line-independent enumeration needs k = 3 (got k = {})",
            shape.k()
        )));
    }
    Ok(())
}

/// Every `size`-subset of points with no two points on a common line, in
/// lexicographic order of sorted point indices.
///
/// With `up_to_symmetry`, only sets that are lexicographically least within
/// their automorphism orbit are kept.
pub fn enumerate_independent_sets(
    shape: Shape,
    size: usize,
    up_to_symmetry: bool,
) -> Result<Vec<Vec<usize>>> {
    require_k3(shape)?;
    let n = shape.point_count();
    if size > n {
        return Err(Error::InvalidArgument(format!(
            "set size {size} exceeds {n} points"
        )));
    }
    let mut conflicts = vec![Bits::empty(n); n];
    for (u, row) in conflicts.iter_mut().enumerate() {
        for v in 0..n {
            if u != v && shape.collinear_unchecked(u, v) {
                row.insert(v);
            }
        }
    }
    let mut all = Bits::empty(n);
    (0..n).for_each(|i| all.insert(i));

    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(size);
    extend(&conflicts, &all, 0, size, &mut chosen, &mut out);
    if up_to_symmetry {
        out = orbit_representatives(shape, out)?;
    }
    Ok(out)
}

fn extend(
    conflicts: &[Bits],
    candidates: &Bits,
    start: usize,
    size: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == size {
        out.push(chosen.clone());
        return;
    }
    if candidates.count_from(start) < size - chosen.len() {
        return;
    }
    for p in start..conflicts.len() {
        if !candidates.contains(p) {
            continue;
        }
        chosen.push(p);
        let next = candidates.and_not(&conflicts[p]);
        extend(conflicts, &next, p + 1, size, chosen, out);
        chosen.pop();
    }
}

/// Keeps the sets that are lexicographically least among their images.
pub fn orbit_representatives(shape: Shape, sets: Vec<Vec<usize>>) -> Result<Vec<Vec<usize>>> {
    let tables: Vec<Vec<usize>> = shape
        .automorphisms()?
        .iter()
        .map(|g| g.point_table(&shape))
        .collect();
    Ok(sets
        .into_iter()
        .filter(|set| {
            tables.iter().all(|table| {
                let mut image: Vec<usize> = set.iter().map(|&p| table[p]).collect();
                image.sort_unstable();
                image >= *set
            })
        })
        .collect())
}

/// Canonically relabeled minimal rainbow-free colorings of `[3]^n` with `num_colors` colors.
pub fn enumerate_minimal_rf(shape: Shape, num_colors: usize) -> Result<Vec<Coloring>> {
    require_k3(shape)?;
    if num_colors == 0 {
        return Err(Error::InvalidArgument(
            "a coloring uses at least one color".into(),
        ));
    }
    let mut out: Vec<Coloring> = Vec::new();
    for set in enumerate_independent_sets(shape, num_colors - 1, false)? {
        let coloring = constructions::singleton_set(shape, &set)?.canonical_relabel();
        if !out.contains(&coloring) {
            out.push(coloring);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(k: u32, n: u32) -> Shape {
        Shape::new(k, n).unwrap()
    }

    /// All `size`-subsets of `0..n`, filtered by pairwise non-collinearity.
    fn brute_force(shape: Shape, size: usize) -> Vec<Vec<usize>> {
        let n = shape.point_count();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let ok = set.iter().enumerate().all(|(i, &a)| {
                set[i + 1..]
                    .iter()
                    .all(|&b| !shape.collinear(a, b).unwrap())
            });
            if ok {
                out.push(set);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn size_three_sets_of_3x2_match_brute_force() {
        let s = shape(3, 2);
        let sets = enumerate_independent_sets(s, 3, false).unwrap();
        assert_eq!(sets, brute_force(s, 3));
        assert_eq!(sets.len(), 5);
        for size in 0..=5 {
            assert_eq!(
                enumerate_independent_sets(s, size, false).unwrap(),
                brute_force(s, size),
                "size {size}"
            );
        }
    }

    #[test]
    fn minimal_colorings_of_3x2() {
        let s = shape(3, 2);
        let four = enumerate_minimal_rf(s, 4).unwrap();
        assert_eq!(four.len(), 5);
        assert!(four
            .iter()
            .all(|c| c.is_rainbow_free().unwrap() && c.is_minimal() && c.distinct_colors() == 4));
        assert!(enumerate_minimal_rf(s, 5).unwrap().is_empty());
        assert_eq!(enumerate_minimal_rf(s, 1).unwrap().len(), 1);
    }

    #[test]
    fn orbits_of_3x2_sets() {
        let s = shape(3, 2);
        let reps = enumerate_independent_sets(s, 3, true).unwrap();
        // the three-line corner start and the two-line edge start
        assert_eq!(reps.len(), 2);
    }

    #[test]
    fn other_k_is_rejected() {
        assert!(matches!(
            enumerate_independent_sets(shape(4, 2), 2, false),
            Err(Error::Unsupported(_))
        ));
        assert!(enumerate_minimal_rf(shape(2, 2), 1).is_err());
    }
}
