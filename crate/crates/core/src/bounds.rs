//! Exact integer bounds on `ah(k, n)`.
//!
//! All intervals are inclusive. Strict lower bounds of the form `x < ah` are
//! stored as `x + 1`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Inclusive interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
}

impl Interval {
    pub fn new(lo: impl Into<BigInt>, hi: impl Into<BigInt>) -> Result<Self> {
        let (lo, hi) = (lo.into(), hi.into());
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "empty interval [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn exact(v: impl Into<BigInt>) -> Self {
        let v = v.into();
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Where a bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    /// `ah(k, 1) = k`: a single line needs `k` colors to be rainbow.
    OneDimensional,
    /// `ah(2, n) = 2`.
    BinaryCube,
    /// Exact value or interval from the compiled table of known results.
    KnownValue,
    /// Digit-position construction: `(k-1)^n < ah(k, n)`.
    DigitPosition,
    /// Layer stacking: `(k-2) ah(k, n-1) - k + 3 < ah(k, n)`.
    StackingLower,
    /// One-step recursion `ah(k, n) <= k ah(k, n-1) - k - 1`.
    RecursiveUpper,
    /// The recursion iterated from `ah(k, 1) = k`.
    IteratedUpper,
    /// The recursion iterated from a known upper bound at a smaller dimension.
    PropagatedUpper,
    /// `ah(3, n) <= 3^(n-1) - 2 * 3^(n-4) + 2` for `n >= 4`.
    RefinedTernaryUpper,
    /// Replaced by a live exact search.
    Search,
}

impl Source {
    pub fn tag(&self) -> &'static str {
        match self {
            Source::OneDimensional => "one-dimensional",
            Source::BinaryCube => "binary-cube",
            Source::KnownValue => "known-value",
            Source::DigitPosition => "digit-position",
            Source::StackingLower => "stacking-lower",
            Source::RecursiveUpper => "recursive-upper",
            Source::IteratedUpper => "iterated-upper",
            Source::PropagatedUpper => "propagated-upper",
            Source::RefinedTernaryUpper => "refined-ternary-upper",
            Source::Search => "search",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownValue {
    pub k: u32,
    pub n: u32,
    pub interval: Interval,
    pub source: Source,
}

/// Compiled table of known values for specific `(k, n)` beyond the general rules.
pub fn known_values() -> Vec<KnownValue> {
    let kv = |k, n, lo: i64, hi: i64| KnownValue {
        k,
        n,
        interval: Interval::new(lo, hi).expect("table intervals are ordered"),
        source: Source::KnownValue,
    };
    vec![kv(3, 2, 5, 5), kv(3, 3, 11, 11), kv(3, 4, 24, 27)]
}

/// Known interval for `(k, n)`, including `ah(k, 1) = k` and `ah(2, n) = 2`.
pub fn known_value(k: u32, n: u32) -> Option<KnownValue> {
    if n == 1 {
        return Some(KnownValue {
            k,
            n,
            interval: Interval::exact(k),
            source: Source::OneDimensional,
        });
    }
    if k == 2 {
        return Some(KnownValue {
            k,
            n,
            interval: Interval::exact(2),
            source: Source::BinaryCube,
        });
    }
    known_values().into_iter().find(|v| v.k == k && v.n == n)
}

fn require_k3(k: u32) -> Result<()> {
    if k < 3 {
        return Err(Error::Unsupported(format!(
            "bound needs k >= 3, got k = {k}"
        )));
    }
    Ok(())
}

/// One stacking/recursion step from an interval for `ah(k, n-1)`:
/// `[(k-2) lo - k + 4, k hi - k - 1]`.
pub fn recursive_step(k: u32, prev: &Interval) -> Result<Interval> {
    require_k3(k)?;
    let k = BigInt::from(k);
    let lo = (&k - 2u32) * &prev.lo - &k + 4u32;
    let hi = &k * &prev.hi - &k - 1u32;
    Ok(Interval { lo, hi })
}

/// Inclusive lower bound `(k-1)^n + 1` from the digit-position construction.
pub fn digit_position_lower(k: u32, n: u32) -> Result<BigInt> {
    require_k3(k)?;
    Ok(BigInt::from(k - 1).pow(n) + 1u32)
}

/// `k^n - k^(n-1) - 2 * sum_{i=1}^{n-2} k^i - 1`.
pub fn iterated_upper(k: u32, n: u32) -> Result<BigInt> {
    require_k3(k)?;
    if n < 2 {
        return Err(Error::InvalidArgument(
            "iterated upper bound needs n >= 2".into(),
        ));
    }
    let kb = BigInt::from(k);
    let sum: BigInt = (1..=n - 2)
        .map(|i| kb.pow(i))
        .fold(BigInt::zero(), |a, b| a + b);
    Ok(kb.pow(n) - kb.pow(n - 1) - sum * 2u32 - BigInt::one())
}

/// Iterates `u <- k u - k - 1` from `u = a_m` for `n - m` steps.
pub fn propagated_upper(k: u32, m: u32, a_m: &BigInt, n: u32) -> Result<BigInt> {
    require_k3(k)?;
    if m < 1 || n <= m {
        return Err(Error::InvalidArgument(format!(
            "need n > m >= 1 (m = {m}, n = {n})"
        )));
    }
    if *a_m < BigInt::from(k) {
        return Err(Error::InvalidArgument(format!(
            "a_m = {a_m} is below ah(k, 1) = {k}"
        )));
    }
    let kb = BigInt::from(k);
    let mut u = a_m.clone();
    for _ in m..n {
        u = &kb * u - &kb - 1u32;
    }
    Ok(u)
}

/// `3^(n-1) - 2 * 3^(n-4) + 2` for `n >= 4` (27 at `n = 4`).
pub fn refined_ternary_upper(n: u32) -> Result<BigInt> {
    if n < 4 {
        return Err(Error::Unsupported(format!(
            "refined ternary bound needs n >= 4, got {n}"
        )));
    }
    let three = BigInt::from(3u32);
    Ok(three.pow(n - 1) - three.pow(n - 4) * 2u32 + 2u32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub n: u32,
    pub lower: BigInt,
    pub lower_source: Source,
    pub upper: BigInt,
    pub upper_source: Source,
}

impl BoundRow {
    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.lower.clone(),
            hi: self.upper.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub k: u32,
    pub rows: Vec<BoundRow>,
}

impl BoundsReport {
    /// Pins row `n` to an exact value found by search, then re-derives later rows.
    pub fn with_exact(&self, n: u32, value: impl Into<BigInt>) -> Result<BoundsReport> {
        let value = value.into();
        let mut pinned = vec![(n, value)];
        pinned.extend(
            self.rows
                .iter()
                .filter(|r| r.lower_source == Source::Search && r.n != n)
                .map(|r| (r.n, r.lower.clone())),
        );
        build(self.k, self.rows.len() as u32, &pinned)
    }

    /// Aligned text table.
    pub fn to_table(&self) -> String {
        let row =
            |n: &dyn std::fmt::Display,
             lo: &dyn std::fmt::Display,
             ls: &str,
             hi: &dyn std::fmt::Display,
             us: &str| { format!("{n:>3}  {lo:>12}  {ls:<22}  {hi:>12}  {us}\n") };
        let mut out = row(&"n", &"lower", "lower source", &"upper", "upper source");
        for r in &self.rows {
            out += &row(
                &r.n,
                &r.lower,
                r.lower_source.tag(),
                &r.upper,
                r.upper_source.tag(),
            );
        }
        out
    }

    /// One `key=value` record per row.
    pub fn to_records(&self) -> String {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "k={} n={} lower={} lower_source={} upper={} upper_source={}\n",
                    self.k, r.n, r.lower, r.lower_source, r.upper, r.upper_source
                )
            })
            .collect()
    }
}

/// Best lower and upper bound for every `n` in `1..=n_max`.
pub fn bounds_table(k: u32, n_max: u32) -> Result<BoundsReport> {
    build(k, n_max, &[])
}

fn build(k: u32, n_max: u32, pinned: &[(u32, BigInt)]) -> Result<BoundsReport> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let mut rows: Vec<BoundRow> = Vec::new();
    for n in 1..=n_max {
        // candidates in priority order; ties keep the earlier one
        let mut lowers: Vec<(BigInt, Source)> = Vec::new();
        let mut uppers: Vec<(BigInt, Source)> = Vec::new();
        if let Some((_, v)) = pinned.iter().find(|(m, _)| *m == n) {
            lowers.push((v.clone(), Source::Search));
            uppers.push((v.clone(), Source::Search));
        }
        if let Some(known) = known_value(k, n) {
            lowers.push((known.interval.lo.clone(), known.source));
            uppers.push((known.interval.hi.clone(), known.source));
        }
        if k >= 3 {
            lowers.push((digit_position_lower(k, n)?, Source::DigitPosition));
            if k == 3 && n >= 4 {
                uppers.push((refined_ternary_upper(n)?, Source::RefinedTernaryUpper));
            }
            if n >= 2 {
                let prev = &rows[n as usize - 2];
                let step = recursive_step(k, &prev.interval())?;
                lowers.push((step.lo, Source::StackingLower));
                uppers.push((step.hi, Source::RecursiveUpper));
                for m in 1..n {
                    if let Some(known) = known_value(k, m) {
                        uppers.push((
                            propagated_upper(k, m, &known.interval.hi, n)?,
                            Source::PropagatedUpper,
                        ));
                    }
                }
                uppers.push((iterated_upper(k, n)?, Source::IteratedUpper));
            }
        }
        let (lower, lower_source) = pick(lowers, |a, b| a > b);
        let (upper, upper_source) = pick(uppers, |a, b| a < b);
        if lower > upper {
            return Err(Error::InvalidArgument(format!(
                "inconsistent bounds at n = {n}: {lower} > {upper}"
            )));
        }
        rows.push(BoundRow {
            n,
            lower,
            lower_source,
            upper,
            upper_source,
        });
    }
    Ok(BoundsReport { k, rows })
}

fn pick(
    candidates: Vec<(BigInt, Source)>,
    better: impl Fn(&BigInt, &BigInt) -> bool,
) -> (BigInt, Source) {
    let mut it = candidates.into_iter();
    let mut best = it.next().expect("every row has a candidate");
    for c in it {
        if better(&c.0, &best.0) {
            best = c;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn recursive_step_examples() {
        assert_eq!(recursive_step(3, &iv(11, 11)).unwrap(), iv(12, 29));
        assert_eq!(recursive_step(3, &iv(5, 5)).unwrap(), iv(6, 11));
        assert_eq!(recursive_step(4, &iv(4, 4)).unwrap(), iv(8, 11));
        assert!(recursive_step(2, &iv(2, 2)).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(digit_position_lower(3, 3).unwrap(), b(9));
        assert_eq!(iterated_upper(3, 3).unwrap(), b(11));
        assert_eq!(iterated_upper(3, 4).unwrap(), b(29));
        assert_eq!(iterated_upper(4, 3).unwrap(), b(39));
        assert_eq!(digit_position_lower(4, 3).unwrap(), b(28));
    }

    #[test]
    fn propagated_examples() {
        assert_eq!(propagated_upper(3, 3, &b(11), 4).unwrap(), b(29));
        assert_eq!(propagated_upper(3, 4, &b(27), 5).unwrap(), b(77));
        assert!(propagated_upper(3, 4, &b(27), 4).is_err());
        assert!(propagated_upper(3, 1, &b(2), 4).is_err());
    }

    #[test]
    fn refined_examples() {
        assert_eq!(refined_ternary_upper(4).unwrap(), b(27));
        assert_eq!(refined_ternary_upper(5).unwrap(), b(77));
        assert!(refined_ternary_upper(3).is_err());
    }

    #[test]
    fn ternary_table() {
        let report = bounds_table(3, 5).unwrap();
        let got: Vec<(BigInt, BigInt)> = report
            .rows
            .iter()
            .map(|r| (r.lower.clone(), r.upper.clone()))
            .collect();
        let want = [(3, 3), (5, 5), (11, 11), (24, 27), (33, 77)].map(|(l, h)| (b(l), b(h)));
        assert_eq!(got, want);
        assert_eq!(report.rows[4].lower_source, Source::DigitPosition);
        assert_eq!(report.rows[4].upper_source, Source::RefinedTernaryUpper);
    }

    #[test]
    fn binary_and_quaternary_tables() {
        let two = bounds_table(2, 6).unwrap();
        assert!(two.rows.iter().all(|r| r.lower == b(2) && r.upper == b(2)));
        let four = bounds_table(4, 3).unwrap();
        assert_eq!(four.rows[2].lower, b(28));
        assert_eq!(four.rows[2].upper, b(39));
        assert_eq!(four.rows[1].interval(), iv(10, 11));
    }

    #[test]
    fn pinning_a_search_value() {
        let report = bounds_table(3, 4).unwrap().with_exact(3, 11).unwrap();
        assert_eq!(report.rows[2].lower_source, Source::Search);
        assert_eq!(report.rows[2].interval(), iv(11, 11));
        assert!(bounds_table(3, 4).unwrap().with_exact(3, 100).is_err());
    }

    #[test]
    fn rendering() {
        let report = bounds_table(3, 2).unwrap();
        let records = report.to_records();
        assert_eq!(
            records,
            "k=3 n=1 lower=3 lower_source=one-dimensional upper=3 upper_source=one-dimensional\n\
             k=3 n=2 lower=5 lower_source=known-value upper=5 upper_source=known-value\n"
        );
        assert!(report.to_table().lines().count() == 3);
    }
}
