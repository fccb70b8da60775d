//! Partial colorings of `[3]^4` built from the two rainbow-free 10-colorings of `[3]^3`.
//!
//! An arrangement code has three digits, one per layer along coordinate 1:
//! `1` or `2` places that pattern on the layer, `0` leaves it unassigned. Both
//! patterns share the dominant color; their singleton palettes are disjoint.

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::hypercube::Shape;

use super::independent::enumerate_minimal_rf;

/// Color id of the shared dominant color.
pub const ARRANGEMENT_DOMINANT: Color = 1;

/// The six codes with both patterns on distinct layers.
pub fn arrangement_codes() -> Vec<&'static str> {
    vec!["120", "102", "012", "210", "201", "021"]
}

/// `[3]^4` with pattern `code[i]` on layer `i + 1` (patterns in enumeration order).
pub fn arrangement(code: &str) -> Result<Coloring> {
    let digits: Vec<u32> = code
        .chars()
        .map(|c| c.to_digit(10).filter(|&d| d <= 2))
        .collect::<Option<_>>()
        .filter(|d: &Vec<u32>| d.len() == 3)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "arrangement code {code:?} must be three digits in 0..=2"
            ))
        })?;
    let cube = Shape::new(3, 3)?;
    let patterns = enumerate_minimal_rf(cube, 10)?;
    if patterns.len() != 2 {
        return Err(Error::Unsupported(format!(
            "expected two 10-colorings of [3]^3, found {}",
            patterns.len()
        )));
    }
    let shape = Shape::new(3, 4)?;
    let mut out = Coloring::unassigned(shape);
    let mut next_color = ARRANGEMENT_DOMINANT + 1;
    for (layer, &digit) in digits.iter().enumerate() {
        if digit == 0 {
            continue;
        }
        let pattern = &patterns[digit as usize - 1];
        let dominant = pattern
            .census()
            .dominant()
            .expect("minimal pattern has a dominant color");
        let mut palette = std::collections::HashMap::new();
        for (p, point) in shape.layer(1, layer as u32 + 1)?.into_iter().enumerate() {
            let c = pattern.get(p);
            let color = if c == dominant {
                ARRANGEMENT_DOMINANT
            } else {
                *palette.entry(c).or_insert_with(|| {
                    next_color += 1;
                    next_color - 1
                })
            };
            out.set(point, color);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrangement_layout() {
        let a = arrangement("120").unwrap();
        assert_eq!(a.unassigned_count(), 27);
        let census = a.census();
        assert_eq!(census.distinct, 19);
        assert_eq!(census.class_sizes[&ARRANGEMENT_DOMINANT], 36);
        assert!(a.assigned_rainbow_lines().is_empty());
        let shape = a.shape();
        assert!(shape.layer(1, 3).unwrap().iter().all(|&p| a.get(p) == 0));
    }

    #[test]
    fn bad_codes() {
        for code in ["12", "1203", "130", "x20"] {
            assert!(arrangement(code).is_err(), "{code}");
        }
    }
}
