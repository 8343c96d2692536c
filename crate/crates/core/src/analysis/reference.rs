//! Published counts and logarithmic rows, shipped as a versioned JSON file.

use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::Deserialize;

const RAW: &str = include_str!("../../data/reference_tables.json");

#[derive(Clone, Debug, Deserialize)]
pub struct CountTable {
    pub d: Vec<u32>,
    pub l2: Vec<String>,
    pub f_half: Vec<String>,
    pub f_tilde: Vec<String>,
    pub scaled_half: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LogTable {
    pub d: Vec<u32>,
    pub l2: Vec<String>,
    pub f_half: Vec<String>,
    pub f_tilde: Vec<String>,
    pub scaled_half: Vec<String>,
    pub u: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ReferenceTables {
    pub version: u32,
    pub table1: CountTable,
    pub table2: LogTable,
}

fn lookup<'a>(ds: &[u32], row: &'a [String], d: u32) -> Option<&'a str> {
    ds.iter().position(|&x| x == d).map(|i| row[i].as_str())
}

fn big(ds: &[u32], row: &[String], d: u32) -> Option<BigUint> {
    lookup(ds, row, d).map(|s| BigUint::from_str(s).expect("reference counts are decimal"))
}

impl CountTable {
    pub fn l2(&self, d: u32) -> Option<BigUint> {
        big(&self.d, &self.l2, d)
    }

    pub fn f_half(&self, d: u32) -> Option<BigUint> {
        big(&self.d, &self.f_half, d)
    }

    pub fn f_tilde(&self, d: u32) -> Option<BigUint> {
        big(&self.d, &self.f_tilde, d)
    }

    pub fn scaled_half(&self, d: u32) -> Option<BigUint> {
        big(&self.d, &self.scaled_half, d)
    }
}

impl LogTable {
    pub fn cell(&self, row: LogRow, d: u32) -> Option<&str> {
        let values = match row {
            LogRow::L2 => &self.l2,
            LogRow::FHalf => &self.f_half,
            LogRow::FTilde => &self.f_tilde,
            LogRow::ScaledHalf => &self.scaled_half,
            LogRow::U => &self.u,
        };
        lookup(&self.d, values, d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogRow {
    L2,
    FHalf,
    FTilde,
    ScaledHalf,
    U,
}

pub fn tables() -> &'static ReferenceTables {
    static TABLES: OnceLock<ReferenceTables> = OnceLock::new();
    TABLES.get_or_init(|| serde_json::from_str(RAW).expect("embedded reference data parses"))
}

/// Dilations covered by the reference data.
pub fn dilations() -> &'static [u32] {
    &tables().table1.d
}
