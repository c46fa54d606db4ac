//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::time::{Duration, Instant};

use harmonic::bernoulli::{bernoulli_half, bernoulli_half_by_polynomial, bernoulli_number};
use harmonic::cli::{cmd_coeffs, OutputFormat};
use harmonic::coefficients::{r_closed, r_convolution, r_umbral};
use harmonic::expansions::GammaEnclosure;
use harmonic::expansions::{gamma_enclosure, Family};
use harmonic::numerics::{parse_decimal, BigRational, HighPrecisionReal, Precision};
use harmonic::verification::{alternating_tail_fraction, decompose_error, sweep, theta};
use num_traits::{Signed, Zero};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn check(&mut self, id: &str, title: &str, run: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {id}  {title}  ({detail}; {elapsed:.2}s)"),
            Err(detail) => {
                println!("FAIL  {id}  {title}  ({detail}; {elapsed:.2}s)");
                self.failures.push(id.to_owned());
            }
        }
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let elapsed = start.elapsed();
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("runtime {elapsed:?} exceeds {limit:?}"))
    }
}

fn dec(s: &str) -> BigRational {
    parse_decimal(s).expect("valid literal")
}

fn sixty_four_digits() -> Precision {
    Precision::from_decimal_digits(64)
}

fn first_nine_coefficients() -> Result<String, String> {
    let start = Instant::now();
    let dump = cmd_coeffs(9, OutputFormat::Table);
    within(Duration::from_secs(1), start)?;
    let expected = [
        "1/12",
        "-1/120",
        "1/630",
        "-1/1680",
        "1/2310",
        "-191/360360",
        "29/30030",
        "-2833/1166880",
        "140051/17459442",
    ];
    let got: Vec<&str> = dump
        .lines()
        .map(|l| l.split('\t').nth(2).unwrap_or(""))
        .collect();
    if got != expected {
        return Err(format!("R column {got:?}"));
    }
    Ok("R_1..R_9 exact".into())
}

fn triple_route_agreement() -> Result<String, String> {
    let start = Instant::now();
    for p in 1..=50 {
        let closed = r_closed(p);
        if closed.is_zero() {
            return Err(format!("R_{p} is zero"));
        }
        if closed != r_convolution(p) || closed != r_umbral(p) {
            return Err(format!("routes disagree at p={p}"));
        }
    }
    within(Duration::from_secs(10), start)?;
    Ok("p=1..50 identical".into())
}

fn theorem_sweep(family: Family) -> Result<String, String> {
    let start = Instant::now();
    let summary = sweep(family, 1..=200, 1..=8, sixty_four_digits()).map_err(|e| e.to_string())?;
    within(Duration::from_secs(60), start)?;
    if summary.reports.len() != 1600 {
        return Err(format!("{} cells", summary.reports.len()));
    }
    if !summary.violations.is_empty() || !summary.indeterminate.is_empty() {
        return Err(format!(
            "{} violations, {} indeterminate",
            summary.violations.len(),
            summary.indeterminate.len()
        ));
    }
    let min_margin = summary.min_margin.ok_or("no cells")?;
    if min_margin.to_rational() <= dec("1e-6") {
        return Err(format!("min margin {}", min_margin.to_scientific_string(6)));
    }
    Ok(format!(
        "1600 cells inside, min margin {}",
        min_margin.to_scientific_string(4)
    ))
}

fn decomposition_reconciliation() -> Result<String, String> {
    let p = sixty_four_digits();
    let tolerance = dec("1e-40");
    let relative = dec("1e-20");
    let mut worst_gap = BigRational::zero();
    for n in 1..=50u64 {
        for r in 0..=6usize {
            let d = decompose_error(n, r, p).map_err(|e| e.to_string())?;
            let gap = (d.total.to_rational() - d.direct_residual.to_rational()).abs();
            if gap >= tolerance {
                return Err(format!("n={n} r={r} reconciliation gap {gap}"));
            }
            worst_gap = worst_gap.max(gap);
            let t = theta(Family::Ramanujan, n, r, p).map_err(|e| e.to_string())?;
            let rel = ((d.theta_implied.to_rational() - t.theta.to_rational())
                / t.theta.to_rational())
            .abs();
            if rel >= relative {
                return Err(format!("n={n} r={r} theta mismatch {rel}"));
            }
        }
    }
    Ok(format!(
        "350 cells, worst gap {}",
        harmonic::numerics::decimal::format_scientific(&worst_gap, 3)
    ))
}

fn gamma_width() -> Result<String, String> {
    let p = sixty_four_digits();
    let e = gamma_enclosure(1000, 4, p).map_err(|e| e.to_string())?;
    let width = e.width();
    if width.to_rational() >= dec("1e-28") {
        return Err(format!("width {}", width.to_scientific_string(4)));
    }
    Ok(format!("width {}", width.to_scientific_string(4)))
}

fn gamma_contains_coarse_midpoint() -> Result<String, String> {
    let p = sixty_four_digits();
    let fine = gamma_enclosure(1000, 4, p).map_err(|e| e.to_string())?;
    let coarse = gamma_enclosure(100, 3, p).map_err(|e| e.to_string())?;
    let mid = coarse.midpoint();
    let fine_mid = fine.midpoint();
    let distance = (&mid - &fine_mid).abs();
    if fine.interval.contains(&mid) {
        Ok("midpoint(100,3) inside enclosure(1000,4)".into())
    } else {
        Err(format!(
            "midpoint(100,3) lies {} from enclosure(1000,4) of width {}",
            distance.to_scientific_string(3),
            fine.width().to_scientific_string(3)
        ))
    }
}

fn gamma_reverse_containment() -> Result<String, String> {
    let p = sixty_four_digits();
    let fine = gamma_enclosure(1000, 4, p).map_err(|e| e.to_string())?;
    let coarse = gamma_enclosure(100, 3, p).map_err(|e| e.to_string())?;
    if coarse.interval.contains(&fine.midpoint())
        && coarse.interval.contains_interval(&fine.interval)
    {
        Ok("enclosure(1000,4) inside enclosure(100,3)".into())
    } else {
        Err("enclosure(1000,4) escapes enclosure(100,3)".into())
    }
}

fn gamma_nesting() -> Result<String, String> {
    let p = sixty_four_digits();
    let mut previous: Option<GammaEnclosure> = None;
    for r in 0..=5 {
        let e = gamma_enclosure(100, r, p).map_err(|e| e.to_string())?;
        if let Some(prev) = &previous {
            if !prev.interval.contains_interval(&e.interval) {
                return Err(format!("r={r} not nested in r={}", r - 1));
            }
        }
        previous = Some(e);
    }
    Ok("n=100, r=0..5 nested".into())
}

fn alternating_remainder() -> Result<String, String> {
    let p = sixty_four_digits();
    let zero = HighPrecisionReal::zero(p);
    let one = HighPrecisionReal::one(p);
    let (mut lo, mut hi) = (one.clone(), zero.clone());
    for n in 1..=200u64 {
        for r in 0..=8usize {
            let alpha = alternating_tail_fraction(n, r, p).map_err(|e| e.to_string())?;
            if alpha <= zero || alpha >= one {
                return Err(format!(
                    "n={n} r={r} alpha={}",
                    alpha.to_scientific_string(10)
                ));
            }
            lo = lo.min(alpha.clone());
            hi = hi.max(alpha);
        }
    }
    Ok(format!(
        "alpha in [{}, {}]",
        lo.to_scientific_string(6),
        hi.to_scientific_string(6)
    ))
}

fn bernoulli_cross_check() -> Result<String, String> {
    for k in 0..=64 {
        if bernoulli_half(k) != bernoulli_half_by_polynomial(k) {
            return Err(format!("routes disagree at k={k}"));
        }
    }
    let b12 = bernoulli_number(12);
    if b12 != BigRational::new((-691).into(), 2730.into()) {
        return Err(format!("B_12 = {b12}"));
    }
    Ok("k=0..64 identical, B_12 = -691/2730".into())
}

fn main() {
    let mut gate = Gate {
        failures: Vec::new(),
    };
    gate.check("AC1", "coefficient table p<=9", first_nine_coefficients);
    gate.check(
        "AC2",
        "three R_p routes agree, p<=50",
        triple_route_agreement,
    );
    gate.check("AC3", "Ramanujan theta in (0,1), n<=200, r<=8", || {
        theorem_sweep(Family::Ramanujan)
    });
    gate.check("AC4", "DeTemple-Wang theta in (0,1), n<=200, r<=8", || {
        theorem_sweep(Family::DeTempleWang)
    });
    gate.check(
        "AC5",
        "error decomposition reconciles, n<=50, r<=6",
        decomposition_reconciliation,
    );
    gate.check("AC6a", "gamma_enclosure(1000,4) width < 1e-28", gamma_width);
    gate.check(
        "AC6b",
        "gamma_enclosure(1000,4) contains midpoint of gamma_enclosure(100,3)",
        gamma_contains_coarse_midpoint,
    );
    gate.check(
        "AC6c",
        "gamma enclosures nested, n=100, r=0..5",
        gamma_nesting,
    );
    gate.check(
        "AC6*",
        "(supplementary) gamma_enclosure(100,3) contains gamma_enclosure(1000,4)",
        gamma_reverse_containment,
    );
    gate.check(
        "AC7",
        "alternating tail fraction in (0,1), n<=200, r<=8",
        alternating_remainder,
    );
    gate.check(
        "AC8",
        "Bernoulli half-value routes, k<=64",
        bernoulli_cross_check,
    );

    if gate.failures.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!(
            "acceptance: {} failing: {}",
            gate.failures.len(),
            gate.failures.join(", ")
        );
        std::process::exit(1);
    }
}
