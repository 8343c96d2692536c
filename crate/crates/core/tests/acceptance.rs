//! One line per acceptance criterion. Extended runs (d = 7) are skipped
//! unless `SYMTRI_EXTENDED=1`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Rational64;
use symtri::analysis::{
    discrepancy_report, explicit_bound_check, fit_window, log_table, reference, table_report,
    CellStatus, ComputedCounts, Rounding, TableId,
};
use symtri::bounds::{
    edge_counts, lower_bound_2, pick_edge_count, point_counts, pow2_at_least, sandwich_check,
    standard_half_triangulation, upper_bound_exponents, L2Variant,
};
use symtri::enumeration::{
    count_via_decomposition, enumerate_naive_symmetric, enumerate_region, enumerate_symmetric,
    Emit, EnumerationConfig, Mode, Triangulation,
};
use symtri::geometry::{lattice_points, Region};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn symmetric(d: u32) -> BigUint {
    enumerate_symmetric(&EnumerationConfig::symmetric(d, Mode::Unimodular), None)
        .expect("enumeration succeeds")
        .count
}

fn half(d: u32) -> BigUint {
    enumerate_region(Region::half(d), Mode::Unimodular, None)
        .expect("enumeration succeeds")
        .count
}

fn list(v: &[BigUint]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn c1() -> Outcome {
    let expected = [1, 2, 7, 74, 1194, 63024].map(big);
    let (got, took) = timed(|| (1..=6).map(symmetric).collect::<Vec<_>>());
    outcome(
        got == expected && took < Duration::from_secs(60),
        format!("symmetric counts d=1..6: [{}] in {:.2?}", list(&got), took),
    )
}

fn c2() -> Outcome {
    let expected = [1, 1, 4, 24, 446, 14057].map(big);
    let (got, took) = timed(|| (1..=6).map(half).collect::<Vec<_>>());
    let differing: Vec<String> = (1..=6)
        .zip(got.iter().zip(&expected))
        .filter(|(_, (g, e))| g != e)
        .map(|(d, (g, e))| format!("d={d}: computed {g}, expected {e}"))
        .collect();
    outcome(
        differing.is_empty() && took < Duration::from_secs(60),
        format!(
            "half-region counts d=1..6: [{}] in {:.2?}{}",
            list(&got),
            took,
            if differing.is_empty() { String::new() } else { format!("; {}", differing.join("; ")) }
        ),
    )
}

fn c3() -> Outcome {
    let pairs: Vec<(BigUint, BigUint)> = (1..=4)
        .map(|d| (enumerate_naive_symmetric(d, Mode::Unimodular).unwrap(), symmetric(d)))
        .collect();
    let ok = pairs.iter().all(|(a, b)| a == b);
    let naive: Vec<BigUint> = pairs.into_iter().map(|p| p.0).collect();
    outcome(ok, format!("naive oracle d=1..4: [{}]", list(&naive)))
}

fn c4() -> Outcome {
    let expected = [9u64, 54, 729, 14580, 613089, 42916230].map(big);
    let got: Vec<BigUint> = (4..=9).map(|d| lower_bound_2(d, L2Variant::TableMatching)).collect();
    let report = table_report(
        TableId::Table1,
        9,
        &ComputedCounts {
            bounds: true,
            ..Default::default()
        },
    );
    let cell3 = report.row("l2").and_then(|r| r.cell(3)).cloned();
    let warned = cell3.as_ref().is_some_and(|c| c.status == CellStatus::Whitelisted);
    let l2_3 = lower_bound_2(3, L2Variant::TableMatching);
    outcome(
        got == expected && warned && l2_3 == big(2),
        format!("L2 d=4..9: [{}]; WARN d=3 computed {l2_3}, reference 1 (whitelisted)", list(&got)),
    )
}

fn c5() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for d in 1..=6 {
        if let Err(e) = sandwich_check(d, &half(d), &symmetric(d)) {
            ok = false;
            notes.push(e.to_string());
        }
    }
    let t1 = &reference::tables().table1;
    for d in 1..=9 {
        let (h, s, scaled) = (t1.f_half(d).unwrap(), t1.f_tilde(d).unwrap(), t1.scaled_half(d).unwrap());
        if let Err(e) = sandwich_check(d, &h, &s) {
            ok = false;
            notes.push(e.to_string());
        }
        if h << (d / 2) as usize != scaled {
            ok = false;
            notes.push(format!("d={d}: reference last row inconsistent"));
        }
    }
    let detail = if notes.is_empty() {
        "sandwich holds on computed d<=6 and reference d<=9; last-row identity holds d=1..9".to_string()
    } else {
        notes.join("; ")
    };
    outcome(ok, detail)
}

fn c6() -> Outcome {
    let got: Vec<(BigUint, BigUint)> = (1..=5).map(|d| (count_via_decomposition(d).unwrap(), symmetric(d))).collect();
    let ok = got.iter().all(|(a, b)| a == b);
    let via: Vec<BigUint> = got.into_iter().map(|p| p.0).collect();
    outcome(ok, format!("decomposition sums d=1..5: [{}]", list(&via)))
}

fn c7() -> Outcome {
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for d in 1..=4 {
        for region in [Region::full(d), Region::half(d)] {
            let config = lattice_points(region);
            let edges = pick_edge_count(config.len() as u64, config.boundary_point_count() as u64);
            let area = region.normalized_area();
            let mut visit = |t: &Triangulation| {
                checked += 1;
                // A segment region has one edge and no triangles.
                let found = if area == 0 { config.len() as u64 - 1 } else { t.edges().len() as u64 };
                if t.len() as u64 != area || found != edges {
                    bad.push(format!("{region}: {}", t.to_line()));
                }
            };
            if region.kind == symtri::geometry::RegionKind::FullTriangle {
                let mut cfg = EnumerationConfig::symmetric(d, Mode::Unimodular);
                cfg.emit = Emit::Stream;
                enumerate_symmetric(&cfg, Some(&mut visit)).unwrap();
            } else {
                enumerate_region(region, Mode::Unimodular, Some(&mut visit)).unwrap();
            }
        }
    }
    for d in 1..=12 {
        let t = standard_half_triangulation(d);
        let direct = t.edges().len().max(usize::from(t.is_empty())) as u64;
        let p = point_counts(d);
        let e = edge_counts(d);
        if e.total != direct || e.total != pick_edge_count(p.n_measured, p.nb_measured) {
            bad.push(format!("edge_counts({d}) = {}", e.total));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{checked} triangulations at d<=4 and edge_counts d=1..12 checked; {} violations{}",
            bad.len(),
            bad.first().map(|b| format!(", first: {b}")).unwrap_or_default()
        ),
    )
}

fn c8() -> Outcome {
    let t1 = &reference::tables().table1;
    let mut ok = true;
    let mut exps = Vec::new();
    for d in 1..=7 {
        let f = if d <= 6 { half(d) } else { t1.f_half(d).unwrap() };
        let e = upper_bound_exponents(d).anclin_interior;
        exps.push(e.to_string());
        ok &= pow2_at_least(Rational64::from_integer(e as i64), &f);
    }
    let flagged = discrepancy_report(6, &ComputedCounts::default())
        .iter()
        .any(|x| x.source == "upper_bound.printed_u" && x.d == 4);
    outcome(
        ok && flagged,
        format!(
            "interior-edge exponents d=1..7: [{}]; printed bound at d=4 flagged: {flagged}",
            exps.join(", ")
        ),
    )
}

fn reference_f_tilde() -> BTreeMap<u32, BigUint> {
    let t1 = &reference::tables().table1;
    t1.d.iter().map(|&d| (d, t1.f_tilde(d).unwrap())).collect()
}

fn c9() -> Outcome {
    let logs = log_table(&reference_f_tilde(), Rounding::Exact).unwrap();
    let fit = fit_window(&logs, 1, 9, false).unwrap();
    let close = (fit.a - 0.56).abs() <= 0.05 && (fit.b + 0.77).abs() <= 0.05 && (fit.c - 0.21).abs() <= 0.05;
    let orth = fit.orthogonality();
    outcome(
        close && orth.iter().all(|o| *o < 1e-9),
        format!("fit {:.5} d^2 {:+.5} d {:+.5}; orthogonality {:.1e}", fit.a, fit.b, fit.c, orth.iter().cloned().fold(0.0, f64::max)),
    )
}

fn c10() -> Outcome {
    let computed = ComputedCounts {
        bounds: true,
        reference_fill: true,
        f_tilde: (1..=6).map(|d| (d, symmetric(d))).collect(),
        ..Default::default()
    };
    let report = table_report(TableId::Table2, 9, &computed);
    let f = report.row("f_tilde").unwrap();
    let matched = f.cells.iter().filter(|c| c.status == CellStatus::Match).count();
    let u = report.row("u").unwrap();
    let annotated = u
        .cells
        .iter()
        .filter(|c| c.status == CellStatus::Whitelisted && c.note.is_some())
        .count();
    let row: Vec<String> = f.cells.iter().filter_map(|c| c.computed.clone()).collect();
    outcome(
        matched == 9 && annotated == 9,
        format!("f~ row [{}] matches {matched}/9; u row annotated {annotated}/9", row.join(", ")),
    )
}

fn c11() -> Outcome {
    let mut f = reference_f_tilde();
    for d in 2..=6 {
        f.insert(d, symmetric(d));
    }
    let results: Vec<_> = (2..=9).map(|d| explicit_bound_check(d, &f[&d])).collect();
    let failures: Vec<String> = results.iter().filter_map(|r| r.as_ref().err().map(|e| e.to_string())).collect();
    let min_slack = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|r| r.lower_slack.min(r.upper_slack))
        .fold(f64::INFINITY, f64::min);
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("explicit bounds hold d=2..9; smallest slack {min_slack:.3}")
        } else {
            failures.join("; ")
        },
    )
}

fn stream(d: u32, workers: usize) -> Vec<u8> {
    let mut cfg = EnumerationConfig::symmetric(d, Mode::Unimodular).with_workers(workers);
    cfg.emit = Emit::Stream;
    let mut out = Vec::new();
    enumerate_symmetric(&cfg, Some(&mut |t: &Triangulation| {
        out.extend_from_slice(t.to_line().as_bytes());
        out.push(b'\n');
    }))
    .unwrap();
    out
}

fn c12() -> Outcome {
    let mut ok = true;
    for d in 1..=5 {
        let one = enumerate_symmetric(&EnumerationConfig::symmetric(d, Mode::Unimodular), None).unwrap();
        let four = enumerate_symmetric(&EnumerationConfig::symmetric(d, Mode::Unimodular).with_workers(4), None).unwrap();
        ok &= one.count == four.count && one.raw_count == four.raw_count;
        let h1 = enumerate_region(Region::half(d), Mode::Unimodular, None).unwrap();
        let cfg = EnumerationConfig::plain(d, Mode::Unimodular).with_workers(4);
        let h4 = symtri::enumeration::enumerate_region_with(Region::half(d), &cfg, None).unwrap();
        ok &= h1.count == h4.count;
    }
    let (a, b) = (stream(5, 1), stream(5, 1));
    let identical = a == b;
    outcome(
        ok && identical,
        format!("worker counts agree d<=5: {ok}; single-worker d=5 streams identical ({} bytes): {identical}", a.len()),
    )
}

fn extended() -> Vec<(&'static str, Outcome)> {
    let (sym, t1) = timed(|| symmetric(7));
    let (h, t2) = timed(|| half(7));
    vec![
        (
            "1 (extended)",
            outcome(
                sym == big(4_739_031) && t1 < Duration::from_secs(1800),
                format!("d=7 symmetric count {sym} in {t1:.2?}"),
            ),
        ),
        (
            "2 (extended)",
            outcome(
                h == big(1_214_208) && t2 < Duration::from_secs(1800),
                format!("d=7 half-region count {h} in {t2:.2?}"),
            ),
        ),
    ]
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("1", c1),
        ("2", c2),
        ("3", c3),
        ("4", c4),
        ("5", c5),
        ("6", c6),
        ("7", c7),
        ("8", c8),
        ("9", c9),
        ("10", c10),
        ("11", c11),
        ("12", c12),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        failed += usize::from(!o.pass);
        println!("criterion {name}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if std::env::var("SYMTRI_EXTENDED").is_ok_and(|v| v == "1") {
        for (name, o) in extended() {
            println!("criterion {name}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        }
    } else {
        println!("extended d=7 runs skipped (set SYMTRI_EXTENDED=1)");
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
