//! Total and partial colorings of `[k]^n`, rainbow checks, census, canonical forms
//! and the `ahj-coloring v1` text format.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, ParseError, Result};
use crate::hypercube::{Line, LineSet, LineTemplate, Shape};

pub type Color = u32;

/// Reserved color id for an unassigned point.
pub const UNASSIGNED: Color = 0;

pub const FORMAT_MAGIC: &str = "ahj-coloring v1";

/// A color id per point, in point-index order. `0` marks an unassigned point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    shape: Shape,
    colors: Vec<Color>,
}

/// Color class sizes of a (possibly partial) coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub distinct: usize,
    pub class_sizes: BTreeMap<Color, usize>,
    pub unassigned: usize,
}

impl Census {
    /// The unique color used more than once, if exactly one such color exists.
    pub fn dominant(&self) -> Option<Color> {
        let mut repeated = self.class_sizes.iter().filter(|(_, &n)| n > 1);
        match (repeated.next(), repeated.next()) {
            (Some((&c, _)), None) => Some(c),
            _ => None,
        }
    }

    /// At most one color appears more than once.
    pub fn is_minimal(&self) -> bool {
        self.class_sizes.values().filter(|&&n| n > 1).count() <= 1
    }

    /// Class sizes, largest first.
    pub fn size_profile(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.class_sizes.values().copied().collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

impl Coloring {
    pub fn new(shape: Shape, colors: Vec<Color>) -> Result<Self> {
        if colors.len() != shape.point_count() {
            return Err(Error::WrongLength {
                expected: shape.point_count(),
                got: colors.len(),
            });
        }
        Ok(Coloring { shape, colors })
    }

    pub fn uniform(shape: Shape, color: Color) -> Self {
        Coloring {
            shape,
            colors: vec![color; shape.point_count()],
        }
    }

    pub fn unassigned(shape: Shape) -> Self {
        Self::uniform(shape, UNASSIGNED)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn get(&self, point: usize) -> Color {
        self.colors[point]
    }

    pub fn set(&mut self, point: usize, color: Color) {
        self.colors[point] = color;
    }

    pub fn is_total(&self) -> bool {
        !self.colors.contains(&UNASSIGNED)
    }

    pub fn unassigned_count(&self) -> usize {
        self.colors.iter().filter(|&&c| c == UNASSIGNED).count()
    }

    fn require_total(&self) -> Result<()> {
        match self.unassigned_count() {
            0 => Ok(()),
            unassigned => Err(Error::PartialColoring { unassigned }),
        }
    }

    pub fn census(&self) -> Census {
        let mut class_sizes = BTreeMap::new();
        let mut unassigned = 0;
        for &c in &self.colors {
            if c == UNASSIGNED {
                unassigned += 1;
            } else {
                *class_sizes.entry(c).or_insert(0) += 1;
            }
        }
        Census {
            distinct: class_sizes.len(),
            class_sizes,
            unassigned,
        }
    }

    pub fn distinct_colors(&self) -> usize {
        self.census().distinct
    }

    pub fn is_minimal(&self) -> bool {
        self.census().is_minimal()
    }

    pub fn is_rainbow(&self, line: &Line) -> Result<bool> {
        let colors: Vec<Color> = line.points().iter().map(|&p| self.colors[p]).collect();
        if colors.contains(&UNASSIGNED) {
            return Err(Error::UnassignedOnLine(line.template().clone()));
        }
        Ok(all_distinct(&colors))
    }

    pub fn is_rainbow_free(&self) -> Result<bool> {
        self.require_total()?;
        let lines = LineSet::new(self.shape);
        let free = lines.iter().all(|(_, pts)| !self.points_rainbow(pts));
        Ok(free)
    }

    /// Every rainbow line, in enumeration order.
    pub fn rainbow_lines(&self) -> Result<Vec<LineTemplate>> {
        self.require_total()?;
        let lines = LineSet::new(self.shape);
        Ok(lines
            .iter()
            .filter(|(_, pts)| self.points_rainbow(pts))
            .map(|(id, _)| lines.template(id).clone())
            .collect())
    }

    /// Rainbow lines among those whose points are all assigned; works on partial colorings.
    pub fn assigned_rainbow_lines(&self) -> Vec<LineTemplate> {
        let lines = LineSet::new(self.shape);
        lines
            .iter()
            .filter(|(_, pts)| {
                pts.iter().all(|&p| self.colors[p] != UNASSIGNED) && self.points_rainbow(pts)
            })
            .map(|(id, _)| lines.template(id).clone())
            .collect()
    }

    pub(crate) fn points_rainbow(&self, points: &[usize]) -> bool {
        let colors: Vec<Color> = points.iter().map(|&p| self.colors[p]).collect();
        all_distinct(&colors)
    }

    /// Distinct colors on each layer `L_1..L_k` along coordinate `t`.
    pub fn layer_color_sets(&self, t: u32) -> Result<Vec<BTreeSet<Color>>> {
        self.require_total()?;
        (1..=self.shape.k())
            .map(|i| {
                Ok(self
                    .shape
                    .layer(t, i)?
                    .into_iter()
                    .map(|p| self.colors[p])
                    .collect())
            })
            .collect()
    }

    /// The restriction to layer `symbol` along coordinate `t`, as a coloring of `[k]^(n-1)`.
    pub fn layer(&self, t: u32, symbol: u32) -> Result<Coloring> {
        let sub = self.shape.layer_shape()?;
        let colors = self
            .shape
            .layer(t, symbol)?
            .into_iter()
            .map(|p| self.colors[p])
            .collect();
        Coloring::new(sub, colors)
    }

    /// Colors renamed `1, 2, ...` in order of first occurrence; unassigned stays `0`.
    pub fn canonical_relabel(&self) -> Coloring {
        let mut names: HashMap<Color, Color> = HashMap::new();
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                if c == UNASSIGNED {
                    return UNASSIGNED;
                }
                let next = names.len() as Color + 1;
                *names.entry(c).or_insert(next)
            })
            .collect();
        Coloring {
            shape: self.shape,
            colors,
        }
    }

    /// The lexicographically least canonical relabeling over all cube automorphisms.
    pub fn orbit_canonical_form(&self) -> Result<Coloring> {
        let group = self.shape.automorphisms()?;
        let mut best: Option<Coloring> = None;
        for g in &group {
            let table = g.point_table(&self.shape);
            let mut image = vec![UNASSIGNED; self.colors.len()];
            for (p, &c) in self.colors.iter().enumerate() {
                image[table[p]] = c;
            }
            let candidate = Coloring {
                shape: self.shape,
                colors: image,
            }
            .canonical_relabel();
            if best.as_ref().is_none_or(|b| candidate.colors < b.colors) {
                best = Some(candidate);
            }
        }
        Ok(best.expect("group contains the identity"))
    }

    pub fn to_text(&self) -> String {
        self.to_text_with_comments(&[])
    }

    /// Serializes with `# comment` lines after the header.
    pub fn to_text_with_comments(&self, comments: &[&str]) -> String {
        let mut out = String::new();
        out.push_str(FORMAT_MAGIC);
        out.push('\n');
        let _ = writeln!(out, "k={} n={}", self.shape.k(), self.shape.n());
        for c in comments {
            let _ = writeln!(out, "# {c}");
        }
        for row in self.colors.chunks(self.shape.k() as usize) {
            let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> std::result::Result<Coloring, ParseError> {
        let err = |line: usize, column: usize, message: String| ParseError {
            line,
            column,
            message,
        };
        // (line number, column of token start, token)
        let mut content: Vec<(usize, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("");
            if !body.trim().is_empty() {
                content.push((i + 1, body));
            }
        }
        let mut rows = content.into_iter();
        let (magic_line, magic) = rows.next().ok_or_else(|| err(1, 1, "empty input".into()))?;
        if magic.trim() != FORMAT_MAGIC {
            return Err(err(
                magic_line,
                1,
                format!("expected header {FORMAT_MAGIC:?}"),
            ));
        }
        let (shape_line, header) = rows
            .next()
            .ok_or_else(|| err(magic_line + 1, 1, "missing shape line".into()))?;
        let shape = parse_shape_header(header).map_err(|m| err(shape_line, 1, m))?;
        let expected = shape.point_count();
        let mut colors = Vec::with_capacity(expected);
        let mut last = (shape_line, 1);
        for (line_no, body) in rows {
            for (column, token) in tokens(body) {
                last = (line_no, column);
                if colors.len() == expected {
                    return Err(err(
                        line_no,
                        column,
                        format!("more than {expected} entries"),
                    ));
                }
                let value: Color = token.parse().map_err(|_| {
                    let what = if token.starts_with('-') {
                        "negative entry"
                    } else {
                        "not a color id"
                    };
                    err(line_no, column, format!("{what}: {token:?}"))
                })?;
                colors.push(value);
            }
        }
        if colors.len() != expected {
            return Err(err(
                last.0,
                last.1,
                format!("expected {expected} entries, found {}", colors.len()),
            ));
        }
        Ok(Coloring { shape, colors })
    }
}

fn parse_shape_header(header: &str) -> std::result::Result<Shape, String> {
    let mut k = None;
    let mut n = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| format!("malformed field {field:?}"))?;
        let value: u32 = value
            .parse()
            .map_err(|_| format!("bad integer in {field:?}"))?;
        match key {
            "k" => k = Some(value),
            "n" => n = Some(value),
            _ => return Err(format!("unknown field {key:?}")),
        }
    }
    match (k, n) {
        (Some(k), Some(n)) => Shape::new(k, n).map_err(|e| e.to_string()),
        _ => Err("shape line must be `k=<int> n=<int>`".into()),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let end = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let token = &tail[..end];
        let column = offset + start + 1;
        offset += start + end;
        rest = &tail[end..];
        Some((column, token))
    })
}

pub(crate) fn all_distinct(colors: &[Color]) -> bool {
    (1..colors.len()).all(|i| !colors[..i].contains(&colors[i]))
}
