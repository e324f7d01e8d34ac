use std::fmt::Write as _;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::seed;
use crate::{Error, Result};

/// Largest arity stored as an explicit table.
pub const MAX_TABLE_ARITY: usize = 20;

/// `f̃ : {0,1}^n → {−1, +1}` as a truth table indexed by `x` with qubit `q`
/// at bit `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignFunction {
    n: usize,
    table: Vec<i8>,
}

impl SignFunction {
    pub fn new(n: usize, table: Vec<i8>) -> Result<Self> {
        if n > MAX_TABLE_ARITY {
            return Err(Error::TooLarge(format!("sign table of arity {n}")));
        }
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: table.len() });
        }
        if let Some(v) = table.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidArgument(format!("sign value {v} is not ±1")));
        }
        Ok(Self { n, table })
    }

    pub fn constant(n: usize) -> Self {
        Self { n, table: vec![1; 1 << n] }
    }

    /// `(−1)^{|x|}`, which sums to zero for `n ≥ 1`.
    pub fn parity(n: usize) -> Self {
        Self { n, table: (0..1usize << n).map(|x| if x.count_ones() % 2 == 0 { 1 } else { -1 }).collect() }
    }

    /// The `k`-th table in the enumeration where bit `x` of `k` set means `f̃(x) = −1`.
    pub fn from_code(n: usize, code: u64) -> Self {
        Self { n, table: (0..1usize << n).map(|x| if (code >> x) & 1 == 1 { -1 } else { 1 }).collect() }
    }

    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = seed::child_rng(seed, seed::stream::SIGN, n as u64);
        Self { n, table: (0..1usize << n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[i8] {
        &self.table
    }

    pub fn value(&self, x: usize) -> i8 {
        self.table[x]
    }

    pub fn sum(&self) -> i64 {
        self.table.iter().map(|&v| v as i64).sum()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for v in &self.table {
            writeln!(s, "{}", if *v > 0 { "+1" } else { "-1" }).expect("write to string");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::parse(hl, "header must be n=<int>"))?;
        let table = lines
            .map(|(ln, l)| match l {
                "+1" | "1" => Ok(1),
                "-1" => Ok(-1),
                _ => Err(Error::parse(ln, format!("expected ±1, found '{l}'"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(n, table)
    }
}
