//! Claim-by-claim reproduction, shared by `ahj repro` and the test suite.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;

use crate::bounds::{self, Interval};
use crate::coloring::Coloring;
use crate::constructions;
use crate::error::Result;
use crate::hypercube::Shape;
use crate::search::{self, SearchConfig, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIPPED",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClaimResult {
    pub name: &'static str,
    pub verdict: Verdict,
    pub detail: String,
    pub wall_ms: u128,
}

#[derive(Debug, Clone)]
pub struct ReproOptions {
    /// Skip claims that take more than a few seconds.
    pub quick: bool,
    pub fixtures: PathBuf,
}

/// A shipped fixture and the color count it must verify with.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub file: &'static str,
    pub colors: usize,
    /// Whether the canonical form must match one of the enumerated minimal 10-colorings of `[3]^3`.
    pub minimal_cube: bool,
}

pub const FIXTURES: [Fixture; 4] = [
    Fixture {
        file: "rf4_3x2.ahj",
        colors: 4,
        minimal_cube: false,
    },
    Fixture {
        file: "rf10_3x3_a.ahj",
        colors: 10,
        minimal_cube: true,
    },
    Fixture {
        file: "rf10_3x3_b.ahj",
        colors: 10,
        minimal_cube: true,
    },
    Fixture {
        file: "rf23_3x4.ahj",
        colors: 23,
        minimal_cube: false,
    },
];

pub fn default_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

type Check = Result<(bool, String)>;

fn timed(name: &'static str, check: impl FnOnce() -> Check) -> ClaimResult {
    let started = Instant::now();
    let (verdict, detail) = match check() {
        Ok((true, d)) => (Verdict::Pass, d),
        Ok((false, d)) => (Verdict::Fail, d),
        Err(e) => (Verdict::Fail, format!("error: {e}")),
    };
    ClaimResult {
        name,
        verdict,
        detail,
        wall_ms: started.elapsed().as_millis(),
    }
}

fn skipped(name: &'static str, detail: &str) -> ClaimResult {
    ClaimResult {
        name,
        verdict: Verdict::Skipped,
        detail: detail.into(),
        wall_ms: 0,
    }
}

/// Exact `ah(k, n)` by search, or a description of why it was not proved.
pub fn exact_ah(
    k: u32,
    n: u32,
    config: &SearchConfig,
) -> Result<std::result::Result<usize, String>> {
    let outcome = search::max_rf_colors(Shape::new(k, n)?, config)?;
    Ok(outcome
        .anti_hales_jewett()
        .ok_or_else(|| format!("{} after {} nodes", outcome.status, outcome.nodes_explored)))
}

fn check_exact(k: u32, n: u32, expected: usize) -> Check {
    Ok(match exact_ah(k, n, &SearchConfig::default())? {
        Ok(ah) => (ah == expected, format!("ah({k},{n}) = {ah}")),
        Err(why) => (false, why),
    })
}

fn line_counts() -> Check {
    for k in 2..=5u32 {
        for n in 1..=4u32 {
            let shape = Shape::new(k, n)?;
            let formula = (k as u128 + 1).pow(n) - (k as u128).pow(n);
            let listed = shape.lines().count() as u128;
            if listed != formula || shape.line_count() != formula {
                return Ok((
                    false,
                    format!("[{k}]^{n}: listed {listed}, formula {formula}"),
                ));
            }
        }
    }
    Ok((true, "k <= 5, n <= 4".into()))
}

fn binary_cubes() -> Check {
    for n in 1..=4 {
        match exact_ah(2, n, &SearchConfig::default())? {
            Ok(2) => {}
            Ok(v) => return Ok((false, format!("ah(2,{n}) = {v}"))),
            Err(why) => return Ok((false, why)),
        }
    }
    Ok((true, "n = 1..4".into()))
}

fn square_sets() -> Check {
    let shape = Shape::new(3, 2)?;
    let all = search::enumerate_independent_sets(shape, 3, false)?.len();
    let orbits = search::enumerate_independent_sets(shape, 3, true)?.len();
    Ok((
        all == 5 && orbits == 2,
        format!("{all} sets, {orbits} up to symmetry"),
    ))
}

fn cube_sets() -> Check {
    let shape = Shape::new(3, 3)?;
    let nine = search::enumerate_independent_sets(shape, 9, false)?.len();
    let orbits = search::enumerate_independent_sets(shape, 9, true)?.len();
    let ten = search::enumerate_independent_sets(shape, 10, false)?.len();
    Ok((
        nine == 2 && ten == 0,
        format!("{nine} sets of size 9 ({orbits} up to symmetry), {ten} of size 10"),
    ))
}

fn digit_position() -> Check {
    for k in 3..=5u32 {
        for n in 2..=4u32 {
            let c = constructions::digit_position(Shape::new(k, n)?)?;
            let want = ((k - 1) as usize).pow(n);
            if !c.is_rainbow_free()? || c.distinct_colors() != want {
                return Ok((false, format!("[{k}]^{n}: {} colors", c.distinct_colors())));
            }
        }
    }
    Ok((true, "k = 3..5, n = 2..4".into()))
}

fn stacking() -> Check {
    for k in 3..=5u32 {
        for n in 2..=4u32 {
            let base = constructions::digit_position(Shape::new(k, n - 1)?)?;
            let stacked = constructions::stack_recursive(&base, 1)?;
            let want = (k as usize - 2) * base.distinct_colors() + 1;
            if !stacked.is_rainbow_free()? || stacked.distinct_colors() != want {
                return Ok((
                    false,
                    format!(
                        "[{k}]^{n}: {} colors, want {want}",
                        stacked.distinct_colors()
                    ),
                ));
            }
        }
    }
    Ok((true, "digit-position bases, k = 3..5, n = 2..4".into()))
}

fn forced_cells() -> Check {
    for code in search::arrangement_codes() {
        if search::find_forced_cell(&search::arrangement(code)?).is_none() {
            return Ok((false, format!("arrangement {code} has no forced cell")));
        }
    }
    Ok((true, "all 6 arrangements".into()))
}

fn arrangement_completions() -> Check {
    let config = SearchConfig {
        time_limit: Some(std::time::Duration::from_secs(60)),
        ..SearchConfig::default()
    };
    for code in search::arrangement_codes() {
        let outcome = search::complete(&search::arrangement(code)?, 27, &config)?;
        if outcome.status != Status::Infeasible {
            return Ok((false, format!("arrangement {code}: {}", outcome.status)));
        }
    }
    Ok((true, "all 6 arrangements INFEASIBLE at 27 colors".into()))
}

fn ternary_table() -> Check {
    let report = bounds::bounds_table(3, 5)?;
    let want = [(3, 3), (5, 5), (11, 11), (24, 27), (33, 77)];
    let got: Vec<Interval> = report.rows.iter().map(|r| r.interval()).collect();
    let ok = got.len() == want.len()
        && got
            .iter()
            .zip(want)
            .all(|(i, (lo, hi))| i.lo == BigInt::from(lo) && i.hi == BigInt::from(hi));
    let text: Vec<String> = got.iter().map(|i| format!("[{},{}]", i.lo, i.hi)).collect();
    Ok((ok, text.join(" ")))
}

fn upper_chains() -> Check {
    for k in 3..=6u32 {
        for n in 2..=10u32 {
            if bounds::iterated_upper(k, n)? != bounds::propagated_upper(k, 1, &BigInt::from(k), n)?
            {
                return Ok((false, format!("k={k}, n={n}")));
            }
        }
    }
    for n in 5..=10u32 {
        if bounds::refined_ternary_upper(n)?
            != bounds::propagated_upper(3, 4, &BigInt::from(27), n)?
        {
            return Ok((false, format!("ternary n={n}")));
        }
    }
    Ok((true, "k = 3..6, n = 2..10".into()))
}

/// Verifies one fixture file; `Ok(None)` when the file is absent.
pub fn check_fixture(
    dir: &Path,
    fixture: &Fixture,
    minimal: &[Coloring],
) -> Result<Option<(bool, String)>> {
    let path = dir.join(fixture.file);
    let Ok(text) = fs::read_to_string(&path) else {
        return Ok(None);
    };
    let c = Coloring::parse(&text)?;
    let mut ok = c.is_rainbow_free()? && c.distinct_colors() == fixture.colors;
    if fixture.minimal_cube {
        let canon = c.canonical_relabel();
        ok &= minimal.iter().any(|m| m.canonical_relabel() == canon);
    }
    Ok(Some((ok, format!("{} colors", c.distinct_colors()))))
}

fn fixtures(dir: &Path) -> ClaimResult {
    const NAME: &str = "shipped fixtures are rainbow-free with their stated color counts";
    let started = Instant::now();
    let minimal = match Shape::new(3, 3).and_then(|s| search::enumerate_minimal_rf(s, 10)) {
        Ok(m) => m,
        Err(e) => {
            return ClaimResult {
                name: NAME,
                verdict: Verdict::Fail,
                detail: e.to_string(),
                wall_ms: 0,
            }
        }
    };
    let mut details = Vec::new();
    let mut verdict = Verdict::Pass;
    for f in &FIXTURES {
        match check_fixture(dir, f, &minimal) {
            Ok(Some((true, _))) => details.push(format!("{} ok", f.file)),
            Ok(Some((false, d))) => {
                verdict = Verdict::Fail;
                details.push(format!("{} bad ({d})", f.file));
            }
            Ok(None) => {
                if verdict == Verdict::Pass {
                    verdict = Verdict::Skipped;
                }
                details.push(format!("{} missing", f.file));
            }
            Err(e) => {
                verdict = Verdict::Fail;
                details.push(format!("{}: {e}", f.file));
            }
        }
    }
    ClaimResult {
        name: NAME,
        verdict,
        detail: details.join(", "),
        wall_ms: started.elapsed().as_millis(),
    }
}

pub fn run_all(options: &ReproOptions) -> Vec<ClaimResult> {
    const SLOW: &str = "slow; omitted by --quick";
    let mut out = vec![
        timed("lines of [k]^n number (k+1)^n - k^n", line_counts),
        timed("ah(3,1) = 3", || check_exact(3, 1, 3)),
        timed("ah(3,2) = 5", || check_exact(3, 2, 5)),
    ];
    out.push(if options.quick {
        skipped("ah(3,3) = 11", SLOW)
    } else {
        timed("ah(3,3) = 11", || check_exact(3, 3, 11))
    });
    out.push(timed("ah(2,n) = 2", binary_cubes));
    out.push(timed("[3]^2 has 5 independent 3-sets", square_sets));
    const CUBE: &str = "[3]^3 has 2 independent 9-sets and no 10-set";
    out.push(if options.quick {
        skipped(CUBE, SLOW)
    } else {
        timed(CUBE, cube_sets)
    });
    out.push(timed(
        "digit-position coloring has (k-1)^n colors",
        digit_position,
    ));
    out.push(timed("stacking gives (k-2)c+1 colors", stacking));
    out.push(timed(
        "every [3]^4 arrangement has a forced cell",
        forced_cells,
    ));
    const COMPLETE: &str = "no arrangement completes to 27 colors";
    out.push(if options.quick {
        skipped(COMPLETE, SLOW)
    } else {
        timed(COMPLETE, arrangement_completions)
    });
    out.push(timed("bounds on ah(3,n), n <= 5", ternary_table));
    out.push(timed("upper bound recurrences agree", upper_chains));
    out.push(fixtures(&options.fixtures));
    out
}

/// Aligned table, one claim per line, then a summary line.
pub fn render(results: &[ClaimResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for r in results {
        let _ = writeln!(
            s,
            "{:<7} {:<width$}  {} ({} ms)",
            r.verdict.label(),
            r.name,
            r.detail,
            r.wall_ms
        );
    }
    let count = |v| results.iter().filter(|r| r.verdict == v).count();
    let _ = writeln!(
        s,
        "passed={} failed={} skipped={}",
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Skipped)
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_repro_has_no_failures() {
        let results = run_all(&ReproOptions {
            quick: true,
            fixtures: default_fixture_dir(),
        });
        let failed: Vec<_> = results
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert!(render(&results)
            .lines()
            .last()
            .unwrap()
            .starts_with("passed="));
    }
}
