//! Points, combinatorial lines, layers and the symmetry group of `[k]^n`.
//!
//! Points are addressed by a mixed-radix index with coordinate 1 most
//! significant: `index = sum_t (c_t - 1) * k^(n - t)`. Symbols are 1-based.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

pub type Symbol = u32;

/// Largest supported point count.
pub const MAX_POINTS: u64 = 1 << 32;

/// Largest symmetry group `automorphisms` will enumerate.
pub const MAX_GROUP_ORDER: u128 = 1_000_000;

/// The alphabet size `k` and dimension `n` of a hypercube `[k]^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    k: u32,
    n: u32,
    count: usize,
}

impl Shape {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        let invalid = |reason| Error::InvalidShape {
            k: k as u64,
            n: n as u64,
            reason,
        };
        if k < 2 {
            return Err(invalid("k must be at least 2"));
        }
        if n < 1 {
            return Err(invalid("n must be at least 1"));
        }
        let count = (k as u64)
            .checked_pow(n)
            .filter(|&c| c <= MAX_POINTS)
            .ok_or_else(|| invalid("k^n exceeds 2^32"))?;
        Ok(Shape {
            k,
            n,
            count: count as usize,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of points, `k^n`.
    pub fn point_count(&self) -> usize {
        self.count
    }

    /// Number of combinatorial lines, `(k+1)^n - k^n`.
    pub fn line_count(&self) -> u128 {
        (self.k as u128 + 1).pow(self.n) - (self.k as u128).pow(self.n)
    }

    /// The shape of one layer, `[k]^(n-1)`. Fails for `n = 1`.
    pub fn layer_shape(&self) -> Result<Shape> {
        Shape::new(self.k, self.n - 1)
    }

    pub fn index_of(&self, coords: &[Symbol]) -> Result<usize> {
        if coords.len() != self.n as usize {
            return Err(Error::WrongDimension {
                expected: self.n as usize,
                got: coords.len(),
            });
        }
        let mut index = 0usize;
        for (position, &value) in coords.iter().enumerate() {
            if value < 1 || value > self.k {
                return Err(Error::CoordinateOutOfRange {
                    position: position + 1,
                    value: value as u64,
                    k: self.k,
                });
            }
            index = index * self.k as usize + (value - 1) as usize;
        }
        Ok(index)
    }

    pub fn point(&self, index: usize) -> Result<Point> {
        if index >= self.count {
            return Err(Error::IndexOutOfRange {
                index: index as u64,
                count: self.count,
            });
        }
        let mut coords = vec![0; self.n as usize];
        self.write_coords(index, &mut coords);
        Ok(Point { coords, index })
    }

    /// Decodes `index` into `out` without range checks.
    pub(crate) fn write_coords(&self, mut index: usize, out: &mut [Symbol]) {
        let k = self.k as usize;
        for slot in out.iter_mut().rev() {
            *slot = (index % k) as Symbol + 1;
            index /= k;
        }
    }

    pub(crate) fn coords(&self, index: usize) -> Vec<Symbol> {
        let mut out = vec![0; self.n as usize];
        self.write_coords(index, &mut out);
        out
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.count).map(move |i| Point {
            coords: self.coords(i),
            index: i,
        })
    }

    /// Every line template in enumeration order (symbols ascending, `*` last).
    pub fn lines(&self) -> LineIter {
        LineIter::new(*self)
    }

    pub fn expand(&self, template: &LineTemplate) -> Result<Line> {
        template.check_shape(self)?;
        let k = self.k as usize;
        let mut points = Vec::with_capacity(k);
        for symbol in 1..=self.k {
            let mut index = 0usize;
            for cell in &template.cells {
                let value = match *cell {
                    Cell::Symbol(s) => s,
                    Cell::Star => symbol,
                };
                index = index * k + (value - 1) as usize;
            }
            points.push(index);
        }
        Ok(Line {
            template: template.clone(),
            points,
        })
    }

    /// Whether two distinct points lie on a common combinatorial line.
    pub fn collinear(&self, u: usize, v: usize) -> Result<bool> {
        self.point(u)?;
        self.point(v)?;
        if u == v {
            return Err(Error::IdenticalPoints);
        }
        Ok(self.collinear_unchecked(u, v))
    }

    pub(crate) fn collinear_unchecked(&self, u: usize, v: usize) -> bool {
        let (cu, cv) = (self.coords(u), self.coords(v));
        let mut pair = None;
        for (&a, &b) in cu.iter().zip(&cv) {
            if a != b {
                match pair {
                    None => pair = Some((a, b)),
                    Some(p) if p == (a, b) => {}
                    Some(_) => return false,
                }
            }
        }
        pair.is_some()
    }

    /// All line templates through `point`, in enumeration order.
    pub fn lines_through(&self, point: usize) -> Result<Vec<LineTemplate>> {
        let coords = self.point(point)?.coords;
        let mut out = Vec::new();
        for symbol in 1..=self.k {
            let positions: Vec<usize> = coords
                .iter()
                .enumerate()
                .filter(|(_, &c)| c == symbol)
                .map(|(t, _)| t)
                .collect();
            let m = positions.len();
            for mask in 1u64..(1u64 << m) {
                let mut cells: Vec<Cell> = coords.iter().map(|&c| Cell::Symbol(c)).collect();
                for (bit, &t) in positions.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        cells[t] = Cell::Star;
                    }
                }
                out.push(LineTemplate { cells });
            }
        }
        out.sort();
        Ok(out)
    }

    /// Points whose coordinate `t` (1-based) equals `symbol`, ascending.
    pub fn layer(&self, t: u32, symbol: Symbol) -> Result<Vec<usize>> {
        if t < 1 || t > self.n {
            return Err(Error::InvalidArgument(format!(
                "coordinate {t} outside 1..={}",
                self.n
            )));
        }
        if symbol < 1 || symbol > self.k {
            return Err(Error::InvalidArgument(format!(
                "symbol {symbol} outside 1..={}",
                self.k
            )));
        }
        let k = self.k as usize;
        let stride = k.pow(self.n - t);
        let digit = (symbol - 1) as usize;
        Ok((0..self.count)
            .filter(|i| (i / stride) % k == digit)
            .collect())
    }

    /// Coordinate permutations times uniform symbol permutations, identity first.
    pub fn automorphisms(&self) -> Result<Vec<Automorphism>> {
        let factorial =
            |m: u32| (1..=m.min(40) as u128).fold(1u128, |acc, x| acc.saturating_mul(x));
        let order = factorial(self.k).saturating_mul(factorial(self.n));
        if order > MAX_GROUP_ORDER {
            return Err(Error::GroupTooLarge { order });
        }
        let coord_perms: Vec<Vec<usize>> =
            (0..self.n as usize).permutations(self.n as usize).collect();
        let symbol_perms: Vec<Vec<Symbol>> = (1..=self.k).permutations(self.k as usize).collect();
        let mut out = Vec::with_capacity(order as usize);
        for cp in &coord_perms {
            for sp in &symbol_perms {
                out.push(Automorphism {
                    coord_perm: cp.clone(),
                    symbol_perm: sp.clone(),
                });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]^{}", self.k, self.n)
    }
}

/// A vertex of `[k]^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<Symbol>,
    index: usize,
}

impl Point {
    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.iter().all(|&c| c <= 9) {
            for c in &self.coords {
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            write!(f, "({})", self.coords.iter().join(","))
        }
    }
}

/// One position of a line template. `Star` orders after every symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Symbol(Symbol),
    Star,
}

/// A word over `[k] ∪ {*}` with at least one star.
///
/// The derived ordering is the enumeration order of [`LineIter`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineTemplate {
    cells: Vec<Cell>,
}

impl LineTemplate {
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        if !cells.contains(&Cell::Star) {
            return Err(Error::InvalidTemplate(
                "template needs at least one '*'".into(),
            ));
        }
        if cells.iter().any(|c| matches!(c, Cell::Symbol(0))) {
            return Err(Error::InvalidTemplate("symbols are 1-based".into()));
        }
        Ok(LineTemplate { cells })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// 1-based coordinates carrying a star.
    pub fn star_set(&self) -> Vec<u32> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Cell::Star)
            .map(|(t, _)| t as u32 + 1)
            .collect()
    }

    fn check_shape(&self, shape: &Shape) -> Result<()> {
        if self.cells.len() != shape.n as usize {
            return Err(Error::WrongDimension {
                expected: shape.n as usize,
                got: self.cells.len(),
            });
        }
        for (position, cell) in self.cells.iter().enumerate() {
            if let Cell::Symbol(s) = *cell {
                if s > shape.k {
                    return Err(Error::CoordinateOutOfRange {
                        position: position + 1,
                        value: s as u64,
                        k: shape.k,
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for LineTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let short = self.cells.iter().all(|c| match c {
            Cell::Symbol(s) => *s <= 9,
            Cell::Star => true,
        });
        let render = |c: &Cell| match c {
            Cell::Symbol(s) => s.to_string(),
            Cell::Star => "*".to_string(),
        };
        if short {
            write!(f, "{}", self.cells.iter().map(render).join(""))
        } else {
            write!(f, "{}", self.cells.iter().map(render).join(","))
        }
    }
}

impl FromStr for LineTemplate {
    type Err = Error;

    /// Accepts `"1*2"` or, for symbols above 9, `"10,*,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_cell = |tok: &str| -> Result<Cell> {
            match tok {
                "*" => Ok(Cell::Star),
                t => t
                    .parse::<Symbol>()
                    .map(Cell::Symbol)
                    .map_err(|_| Error::InvalidTemplate(format!("bad cell {t:?}"))),
            }
        };
        let cells = if s.contains(',') {
            s.split(',')
                .map(|t| parse_cell(t.trim()))
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| parse_cell(&c.to_string()))
                .collect::<Result<Vec<_>>>()?
        };
        LineTemplate::new(cells)
    }
}

/// A template expanded into its `k` ordered points (by index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    template: LineTemplate,
    points: Vec<usize>,
}

impl Line {
    pub fn template(&self) -> &LineTemplate {
        &self.template
    }

    /// `points()[i]` has symbol `i + 1` at every starred position.
    pub fn points(&self) -> &[usize] {
        &self.points
    }
}

/// Odometer over `({1..k} ∪ {*})^n`, last coordinate fastest, skipping star-free words.
#[derive(Debug, Clone)]
pub struct LineIter {
    k: u32,
    digits: Vec<u32>,
    done: bool,
}

impl LineIter {
    fn new(shape: Shape) -> Self {
        // digit value `k` encodes the star
        LineIter {
            k: shape.k,
            digits: vec![0; shape.n as usize],
            done: false,
        }
    }

    fn advance(&mut self) {
        for d in self.digits.iter_mut().rev() {
            if *d < self.k {
                *d += 1;
                return;
            }
            *d = 0;
        }
        self.done = true;
    }
}

impl Iterator for LineIter {
    type Item = LineTemplate;

    fn next(&mut self) -> Option<LineTemplate> {
        loop {
            if self.done {
                return None;
            }
            let has_star = self.digits.contains(&self.k);
            let template = has_star.then(|| LineTemplate {
                cells: self
                    .digits
                    .iter()
                    .map(|&d| {
                        if d == self.k {
                            Cell::Star
                        } else {
                            Cell::Symbol(d + 1)
                        }
                    })
                    .collect(),
            });
            self.advance();
            if let Some(t) = template {
                return Some(t);
            }
        }
    }
}

/// A coordinate permutation combined with one symbol permutation applied to every coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    coord_perm: Vec<usize>,
    symbol_perm: Vec<Symbol>,
}

impl Automorphism {
    /// `coord_perm[t]` is the 0-based image of position `t`; `symbol_perm[s - 1]` the image of symbol `s`.
    pub fn new(coord_perm: Vec<usize>, symbol_perm: Vec<Symbol>) -> Result<Self> {
        let is_perm = |v: &[usize]| {
            let mut seen = vec![false; v.len()];
            v.iter()
                .all(|&x| x < seen.len() && !std::mem::replace(&mut seen[x], true))
        };
        let shifted: Vec<usize> = symbol_perm
            .iter()
            .map(|&s| (s as usize).wrapping_sub(1))
            .collect();
        if !is_perm(&coord_perm) || !is_perm(&shifted) {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        Ok(Automorphism {
            coord_perm,
            symbol_perm,
        })
    }

    pub fn identity(shape: &Shape) -> Self {
        Automorphism {
            coord_perm: (0..shape.n as usize).collect(),
            symbol_perm: (1..=shape.k).collect(),
        }
    }

    pub fn coord_perm(&self) -> &[usize] {
        &self.coord_perm
    }

    pub fn symbol_perm(&self) -> &[Symbol] {
        &self.symbol_perm
    }

    pub fn apply_coords(&self, coords: &[Symbol]) -> Vec<Symbol> {
        let mut out = vec![0; coords.len()];
        for (t, &c) in coords.iter().enumerate() {
            out[self.coord_perm[t]] = self.symbol_perm[(c - 1) as usize];
        }
        out
    }

    pub fn apply(&self, shape: &Shape, index: usize) -> usize {
        let image = self.apply_coords(&shape.coords(index));
        image
            .iter()
            .fold(0, |acc, &c| acc * shape.k as usize + (c - 1) as usize)
    }

    /// `table[p]` is the image of point `p`.
    pub fn point_table(&self, shape: &Shape) -> Vec<usize> {
        (0..shape.point_count())
            .map(|p| self.apply(shape, p))
            .collect()
    }
}

/// Every line of a shape, expanded once, with a point-to-lines incidence index.
#[derive(Debug, Clone)]
pub struct LineSet {
    shape: Shape,
    templates: Vec<LineTemplate>,
    points: Vec<usize>,
    through: Vec<Vec<usize>>,
}

impl LineSet {
    pub fn new(shape: Shape) -> Self {
        let k = shape.k as usize;
        let templates: Vec<LineTemplate> = shape.lines().collect();
        let mut points = Vec::with_capacity(templates.len() * k);
        let mut through = vec![Vec::new(); shape.point_count()];
        for (id, t) in templates.iter().enumerate() {
            let line = shape
                .expand(t)
                .expect("enumerated templates fit their shape");
            for &p in line.points() {
                through[p].push(id);
            }
            points.extend_from_slice(line.points());
        }
        LineSet {
            shape,
            templates,
            points,
            through,
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn template(&self, line: usize) -> &LineTemplate {
        &self.templates[line]
    }

    pub fn points(&self, line: usize) -> &[usize] {
        let k = self.shape.k as usize;
        &self.points[line * k..(line + 1) * k]
    }

    /// Line ids through `point`, ascending.
    pub fn through(&self, point: usize) -> &[usize] {
        &self.through[point]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[usize])> + '_ {
        (0..self.len()).map(move |id| (id, self.points(id)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(k: u32, n: u32) -> Shape {
        Shape::new(k, n).unwrap()
    }

    fn t(s: &str) -> LineTemplate {
        s.parse().unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(Shape::new(1, 3).is_err());
        assert!(Shape::new(3, 0).is_err());
        assert!(Shape::new(2, 32).is_ok());
        assert!(Shape::new(2, 33).is_err());
        assert!(Shape::new(3, 21).is_err());
        assert_eq!(shape(3, 4).point_count(), 81);
    }

    #[test]
    fn point_index_examples() {
        let s = shape(3, 2);
        assert_eq!(s.index_of(&[1, 1]).unwrap(), 0);
        assert_eq!(s.index_of(&[2, 3]).unwrap(), 5);
        assert_eq!(shape(3, 3).point(26).unwrap().coords(), &[3, 3, 3]);
        assert!(s.index_of(&[0, 1]).is_err());
        assert!(s.index_of(&[4, 1]).is_err());
        assert!(s.index_of(&[1]).is_err());
        assert!(s.point(9).is_err());
    }

    #[test]
    fn line_counts_match_examples() {
        assert_eq!(shape(3, 2).lines().count(), 7);
        assert_eq!(shape(2, 2).lines().count(), 5);
        let only: Vec<String> = shape(3, 1).lines().map(|l| l.to_string()).collect();
        assert_eq!(only, vec!["*"]);
        let k2: Vec<String> = shape(2, 2).lines().map(|l| l.to_string()).collect();
        assert_eq!(k2, vec!["1*", "2*", "*1", "*2", "**"]);
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let lines: Vec<_> = shape(3, 3).lines().collect();
        assert!(lines.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn expand_examples() {
        let s = shape(3, 2);
        let pts = |tmpl: &str, s: &Shape| -> Vec<Vec<Symbol>> {
            s.expand(&t(tmpl))
                .unwrap()
                .points()
                .iter()
                .map(|&p| s.coords(p))
                .collect()
        };
        assert_eq!(pts("*2", &s), vec![vec![1, 2], vec![2, 2], vec![3, 2]]);
        assert_eq!(pts("**", &s), vec![vec![1, 1], vec![2, 2], vec![3, 3]]);
        let s3 = shape(3, 3);
        assert_eq!(
            pts("1**", &s3),
            vec![vec![1, 1, 1], vec![1, 2, 2], vec![1, 3, 3]]
        );
        assert!(s.expand(&t("1**")).is_err());
        assert!(s.expand(&t("4*")).is_err());
    }

    #[test]
    fn collinear_examples() {
        let s = shape(3, 2);
        let i = |c: [u32; 2]| s.index_of(&c).unwrap();
        assert!(s.collinear(i([1, 1]), i([3, 3])).unwrap());
        assert!(!s.collinear(i([1, 3]), i([3, 1])).unwrap());
        assert!(s.collinear(i([1, 2]), i([1, 3])).unwrap());
        assert_eq!(s.collinear(0, 0), Err(Error::IdenticalPoints));
    }

    #[test]
    fn lines_through_examples() {
        let s = shape(3, 2);
        let names = |p| {
            s.lines_through(p)
                .unwrap()
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(names(0), vec!["1*", "*1", "**"]);
        assert_eq!(names(s.index_of(&[1, 2]).unwrap()), vec!["1*", "*2"]);
    }

    #[test]
    fn layer_examples() {
        let s = shape(3, 2);
        let row2: Vec<usize> = [[2, 1], [2, 2], [2, 3]]
            .iter()
            .map(|c| s.index_of(c).unwrap())
            .collect();
        assert_eq!(s.layer(1, 2).unwrap(), row2);
        let s3 = shape(3, 3);
        let mid = s3.layer(2, 1).unwrap();
        assert_eq!(mid.len(), 9);
        assert!(mid.iter().all(|&p| s3.coords(p)[1] == 1));
        assert!(s.layer(3, 1).is_err());
        assert!(s.layer(1, 4).is_err());
    }

    #[test]
    fn automorphism_group_sizes() {
        let g = shape(3, 3).automorphisms().unwrap();
        assert_eq!(g.len(), 36);
        assert_eq!(g[0], Automorphism::identity(&shape(3, 3)));
        assert_eq!(shape(2, 1).automorphisms().unwrap().len(), 2);
        assert!(matches!(
            shape(10, 3).automorphisms(),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn template_parsing() {
        assert_eq!(t("1*2").to_string(), "1*2");
        assert_eq!(t("10,*,2").cells()[0], Cell::Symbol(10));
        assert!("123".parse::<LineTemplate>().is_err());
        assert!("1x".parse::<LineTemplate>().is_err());
        assert_eq!(t("*2*").star_set(), vec![1, 3]);
    }

    #[test]
    fn line_set_incidence() {
        let s = shape(3, 3);
        let set = LineSet::new(s);
        assert_eq!(set.len(), 37);
        for p in 0..s.point_count() {
            assert_eq!(set.through(p).len(), s.lines_through(p).unwrap().len());
            for &l in set.through(p) {
                assert!(set.points(l).contains(&p));
            }
        }
    }
}
