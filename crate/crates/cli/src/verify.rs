use serde::Serialize;
use symtri::analysis::{discrepancy_report, table_report, CellStatus, ComputedCounts, TableId};
use symtri::bounds::{pick_edge_count, sandwich_check};
use symtri::enumeration::{
    count_via_decomposition, enumerate_naive_symmetric, enumerate_region_with, enumerate_symmetric,
    Emit, EnumerationConfig, Mode, Triangulation,
};
use symtri::geometry::{lattice_points, Region};

pub const VERIFY_MAX_D: u32 = 6;
const ORACLE_MAX_D: u32 = 4;
const DECOMPOSITION_MAX_D: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub d_max: u32,
    pub status: Status,
    pub checks: Vec<Check>,
}

fn check(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        detail: detail.into(),
    }
}

pub fn run(d_max: u32, workers: usize) -> anyhow::Result<Summary> {
    let mut checks = Vec::new();
    let mut computed = ComputedCounts {
        bounds: true,
        ..Default::default()
    };
    for d in 1..=d_max {
        let sym = enumerate_symmetric(&EnumerationConfig::symmetric(d, Mode::Unimodular).with_workers(workers), None)?;
        let cfg = EnumerationConfig::plain(d, Mode::Unimodular).with_workers(workers);
        let half = enumerate_region_with(Region::half(d), &cfg, None)?;
        computed.f_tilde.insert(d, sym.count.clone());
        computed.f_half.insert(d, half.count.clone());

        if d <= ORACLE_MAX_D {
            let naive = enumerate_naive_symmetric(d, Mode::Unimodular)?;
            checks.push(check(
                format!("oracle d={d}"),
                naive == sym.count,
                format!("naive {naive}, reverse search {}", sym.count),
            ));
            checks.push(pick_check(d)?);
        }
        checks.push(match sandwich_check(d, &half.count, &sym.count) {
            Ok(r) => check(format!("sandwich d={d}"), true, format!("{} <= {} <= {}", r.f_half, r.f_sym, r.upper)),
            Err(e) => check(format!("sandwich d={d}"), false, e.to_string()),
        });
        if d <= DECOMPOSITION_MAX_D {
            let via = count_via_decomposition(d)?;
            checks.push(check(
                format!("decomposition d={d}"),
                via == sym.count,
                format!("sum {via}, symmetric {}", sym.count),
            ));
        }
    }

    let report = table_report(TableId::Table1, d_max, &computed);
    for (row, cell) in report.cells() {
        let name = format!("table1 {} d={}", row.key, cell.d);
        let values = format!(
            "computed {}, reference {}",
            cell.computed.as_deref().unwrap_or("-"),
            cell.reference.as_deref().unwrap_or("-")
        );
        let status = match cell.status {
            CellStatus::Match => Status::Pass,
            CellStatus::Whitelisted => Status::Warn,
            CellStatus::Mismatch => Status::Fail,
            CellStatus::ReferenceOnly | CellStatus::ComputedOnly => continue,
        };
        let detail = match &cell.note {
            Some(n) => format!("{values} ({n})"),
            None => values,
        };
        checks.push(Check { name, status, detail });
    }
    for x in discrepancy_report(d_max, &computed) {
        if x.source.starts_with("table1.") || !x.whitelisted {
            continue;
        }
        checks.push(Check {
            name: format!("{} d={}", x.source, x.d),
            status: Status::Warn,
            detail: format!(
                "computed {}, reference {}{}",
                x.computed,
                x.reference,
                x.note.map(|n| format!(" ({n})")).unwrap_or_default()
            ),
        });
    }

    let status = if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    };
    Ok(Summary { d_max, status, checks })
}

fn pick_check(d: u32) -> anyhow::Result<Check> {
    let config = lattice_points(Region::full(d));
    let expected = pick_edge_count(config.len() as u64, config.boundary_point_count() as u64);
    let mut cfg = EnumerationConfig::symmetric(d, Mode::Unimodular);
    cfg.emit = Emit::Stream;
    let (mut seen, mut bad) = (0u64, 0u64);
    enumerate_symmetric(&cfg, Some(&mut |t: &Triangulation| {
        seen += 1;
        if t.edges().len() as u64 != expected || t.len() as u64 != u64::from(d * d) {
            bad += 1;
        }
    }))?;
    Ok(check(
        format!("edges d={d}"),
        bad == 0,
        format!("{seen} triangulations, {expected} edges each expected, {bad} violations"),
    ))
}
