//! Price-per-qubit arithmetic. Amounts are integer US cents; machine totals
//! are arbitrary precision so no product can overflow or round.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Price per physical qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PricePoint {
    pub ppq_cents: u64,
    pub label: String,
}

impl PricePoint {
    pub fn new(ppq_cents: u64, label: impl Into<String>) -> Result<Self> {
        if ppq_cents == 0 {
            return Err(Error::InvalidInput("price per qubit must be positive".into()));
        }
        Ok(Self {
            ppq_cents,
            label: label.into(),
        })
    }

    /// Price point labelled with its own formatted amount.
    pub fn from_cents(ppq_cents: u64) -> Result<Self> {
        Self::new(ppq_cents, format_usd(&BigUint::from(ppq_cents)))
    }

    /// Parses amounts such as `$1000`, `0.01` or `$1.5 Million`.
    pub fn parse(s: &str) -> Result<Self> {
        let cents = parse_usd(s)?
            .to_u64()
            .ok_or_else(|| Error::InvalidInput(format!("price per qubit {s} is too large")))?;
        Self::from_cents(cents)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineCost {
    pub qubits: u64,
    pub ppq: PricePoint,
    #[serde(with = "cents_string")]
    pub total_cents: BigUint,
}

impl MachineCost {
    pub fn formatted(&self) -> String {
        format_usd(&self.total_cents)
    }
}

mod cents_string {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Cost of `qubits` physical qubits at `ppq`, exact to the cent.
pub fn machine_cost(qubits: u64, ppq: &PricePoint) -> Result<MachineCost> {
    if qubits == 0 {
        return Err(Error::InvalidInput("machine needs at least one qubit".into()));
    }
    if ppq.ppq_cents == 0 {
        return Err(Error::InvalidInput("price per qubit must be positive".into()));
    }
    Ok(MachineCost {
        qubits,
        ppq: ppq.clone(),
        total_cents: BigUint::from(qubits) * ppq.ppq_cents,
    })
}

/// Price per qubit of a whole system, rounded half-up to the cent.
pub fn ppq_from_system(total_cents: &BigUint, qubits: u64) -> Result<PricePoint> {
    if qubits == 0 {
        return Err(Error::InvalidInput("system needs at least one qubit".into()));
    }
    let q = BigUint::from(qubits);
    let rounded: BigUint = (total_cents * 2u32 + &q) / (&q * 2u32);
    let cents = rounded
        .to_u64()
        .ok_or_else(|| Error::InvalidInput("price per qubit exceeds the representable range".into()))?;
    PricePoint::from_cents(cents)
}

const UNITS: [(&str, u32); 3] = [("Trillion", 12), ("Billion", 9), ("Million", 6)];

fn group_thousands(digits: &str) -> String {
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// US-dollar formatting: amounts below one million are written out with
/// thousands separators (`$200,000`, `$0.01`); larger amounts use a unit
/// word with an exact, trailing-zero-free decimal (`$1.5 Million`).
pub fn format_usd(cents: &BigUint) -> String {
    let hundred = BigUint::from(100u32);
    for (word, exp) in UNITS {
        let unit = BigUint::from(10u32).pow(exp + 2);
        if cents >= &unit {
            let whole = cents / &unit;
            let frac = cents % &unit;
            let mut s = format!("${}", group_thousands(&whole.to_string()));
            if !frac.is_zero() {
                let digits = format!("{:0>width$}", frac.to_string(), width = exp as usize + 2);
                let _ = write!(s, ".{}", digits.trim_end_matches('0'));
            }
            return format!("{s} {word}");
        }
    }
    let dollars = cents / &hundred;
    let rem = (cents % &hundred).to_u32().unwrap_or(0);
    let mut s = format!("${}", group_thousands(&dollars.to_string()));
    if rem != 0 {
        let _ = write!(s, ".{rem:02}");
    }
    s
}

/// Inverse of [`format_usd`]; also accepts plain numbers and `Thousand`.
/// Fails if the amount is not a whole number of cents.
pub fn parse_usd(s: &str) -> Result<BigUint> {
    let bad = || Error::InvalidInput(format!("cannot parse currency amount {s:?}"));
    let t = s.trim();
    let t = t.strip_prefix('$').unwrap_or(t).trim();
    let (number, exp) = match t.rsplit_once(char::is_whitespace) {
        Some((n, word)) => {
            let exp = match word.to_ascii_lowercase().as_str() {
                "thousand" => 3,
                "million" => 6,
                "billion" => 9,
                "trillion" => 12,
                _ => return Err(bad()),
            };
            (n.trim(), exp)
        }
        None => (t, 0),
    };
    let number: String = number.chars().filter(|&c| c != ',').collect();
    let (int, frac) = number.split_once('.').unwrap_or((&number, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    // value = int.frac * 10^(exp+2) cents
    let scale = exp + 2;
    let frac = frac.trim_end_matches('0');
    if frac.len() > scale {
        return Err(Error::InvalidInput(format!("{s:?} is not a whole number of cents")));
    }
    let digits = format!("{int}{frac}{}", "0".repeat(scale - frac.len()));
    let digits = digits.trim_start_matches('0');
    if digits.is_empty() {
        return Ok(BigUint::zero());
    }
    digits.parse().map_err(|_| bad())
}

/// Qubit counts behind the two columns of the reference cost table.
pub const TABLE1_COUNTS: [(u64, &str); 2] = [(20_000_000, "factoring"), (200_000_000, "nitrogenase")];

/// Price points, in cents, of the reference cost table rows.
pub const TABLE1_PPQ_CENTS: [u64; 3] = [100_000, 100, 1];

/// Printed value of a reference-table cell, if `(qubits, ppq)` is one of them.
pub fn table1_reference(qubits: u64, ppq_cents: u64) -> Option<&'static str> {
    Some(match (qubits, ppq_cents) {
        (20_000_000, 100_000) => "$20 Billion",
        (200_000_000, 100_000) => "$200 Billion",
        (20_000_000, 100) => "$20 Million",
        (200_000_000, 100) => "$200 Million",
        (20_000_000, 1) => "$200,000",
        (200_000_000, 1) => "$1 Million",
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostCell {
    pub cost: MachineCost,
    pub formatted: String,
    /// Printed reference value for this cell, when one exists.
    pub reference: Option<String>,
    /// Set when the computed total disagrees with the printed reference.
    pub discrepancy: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostTable {
    pub qubit_counts: Vec<u64>,
    pub ppqs: Vec<PricePoint>,
    /// Row-major: one row per price point, one column per qubit count.
    pub cells: Vec<CostCell>,
}

/// Full cross product of `machine_cost` over price points and qubit counts.
pub fn cost_table(qubit_counts: &[u64], ppqs: &[PricePoint]) -> Result<CostTable> {
    if qubit_counts.is_empty() || ppqs.is_empty() {
        return Err(Error::InvalidInput("cost table needs at least one qubit count and one price".into()));
    }
    let mut cells = Vec::with_capacity(qubit_counts.len() * ppqs.len());
    for ppq in ppqs {
        for &n in qubit_counts {
            let cost = machine_cost(n, ppq)?;
            let formatted = cost.formatted();
            let reference = table1_reference(n, ppq.ppq_cents);
            let discrepancy = reference.and_then(|r| {
                let printed = parse_usd(r).expect("reference values parse");
                (printed != cost.total_cents).then(|| {
                    format!("reference table lists {r}, but {n} qubits at {} is {formatted}", ppq.label)
                })
            });
            cells.push(CostCell {
                cost,
                formatted,
                reference: reference.map(str::to_string),
                discrepancy,
            });
        }
    }
    Ok(CostTable {
        qubit_counts: qubit_counts.to_vec(),
        ppqs: ppqs.to_vec(),
        cells,
    })
}

/// The reference table: two algorithm sizes at three price points.
pub fn table1() -> CostTable {
    let counts: Vec<u64> = TABLE1_COUNTS.iter().map(|c| c.0).collect();
    let ppqs: Vec<PricePoint> = TABLE1_PPQ_CENTS
        .iter()
        .map(|&c| PricePoint::from_cents(c).expect("positive"))
        .collect();
    cost_table(&counts, &ppqs).expect("non-empty")
}

impl CostTable {
    fn cell(&self, row: usize, col: usize) -> &CostCell {
        &self.cells[row * self.qubit_counts.len() + col]
    }

    /// Long-form CSV: one line per cell, totals in cents and formatted.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["qubits", "ppq_cents", "ppq", "total_cents", "total", "reference", "discrepancy"])?;
        for c in &self.cells {
            w.write_record([
                c.cost.qubits.to_string(),
                c.cost.ppq.ppq_cents.to_string(),
                c.cost.ppq.label.clone(),
                c.cost.total_cents.to_string(),
                c.formatted.clone(),
                c.reference.clone().unwrap_or_default(),
                c.discrepancy.clone().unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Aligned grid with price points down the side; flagged cells get a `*`.
    pub fn to_text(&self) -> String {
        let header: Vec<String> = std::iter::once("PPQ".to_string())
            .chain(self.qubit_counts.iter().map(|n| {
                let mut h = format!("{} qubits", group_thousands(&n.to_string()));
                if let Some((_, app)) = TABLE1_COUNTS.iter().find(|(c, _)| c == n) {
                    let _ = write!(h, " ({app})");
                }
                h
            }))
            .collect();
        let mut rows = vec![header];
        for (r, ppq) in self.ppqs.iter().enumerate() {
            let mut row = vec![ppq.label.clone()];
            for c in 0..self.qubit_counts.len() {
                let cell = self.cell(r, c);
                let flag = if cell.discrepancy.is_some() { " *" } else { "" };
                row.push(format!("{}{flag}", cell.formatted));
            }
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:<w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        for cell in self.cells.iter().filter_map(|c| c.discrepancy.as_ref()) {
            let _ = writeln!(out, "* {cell}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn usd(cents: u64) -> PricePoint {
        PricePoint::from_cents(cents).unwrap()
    }

    #[test]
    fn machine_costs() {
        let c = machine_cost(20_000_000, &usd(100_000)).unwrap();
        assert_eq!(c.formatted(), "$20 Billion");
        let c = machine_cost(200_000_000, &usd(1)).unwrap();
        assert_eq!(c.total_cents, BigUint::from(200_000_000u64));
        assert_eq!(c.formatted(), "$2 Million");
        assert_eq!(machine_cost(1, &usd(100)).unwrap().formatted(), "$1");
        assert!(machine_cost(0, &usd(100)).is_err());
        assert!(PricePoint::new(0, "free").is_err());
    }

    #[test]
    fn ppq_inversion() {
        assert_eq!(ppq_from_system(&BigUint::from(100_000_000u64), 50).unwrap().ppq_cents, 2_000_000);
        assert_eq!(ppq_from_system(&BigUint::from(100u32), 1).unwrap().ppq_cents, 100);
        // 1 cent over 3 qubits rounds to 0 and is rejected as a price
        assert!(ppq_from_system(&BigUint::from(1u32), 3).is_err());
        assert_eq!(ppq_from_system(&BigUint::from(5u32), 2).unwrap().ppq_cents, 3);
        assert!(ppq_from_system(&BigUint::from(5u32), 0).is_err());
    }

    #[test]
    fn formatting() {
        let f = |c: u64| format_usd(&BigUint::from(c));
        assert_eq!(f(20_000_000_000), "$200 Million");
        assert_eq!(f(20_000_000), "$200,000");
        assert_eq!(f(1), "$0.01");
        assert_eq!(f(123_456), "$1,234.56");
        assert_eq!(f(150_000_000), "$1.5 Million");
        assert_eq!(f(100_000_000_000_000_000), "$1,000 Trillion");
        assert_eq!(f(0), "$0");
    }

    #[test]
    fn parsing() {
        let p = |s: &str| parse_usd(s).unwrap();
        assert_eq!(p("$200 Million"), BigUint::from(20_000_000_000u64));
        assert_eq!(p("$200,000"), BigUint::from(20_000_000u64));
        assert_eq!(p("0.01"), BigUint::from(1u32));
        assert_eq!(p("$1.5 thousand"), BigUint::from(150_000u32));
        assert_eq!(p("$.5"), BigUint::from(50u32));
        assert!(parse_usd("$0.001").is_err());
        assert!(parse_usd("$12 Zillion").is_err());
        assert!(parse_usd("$").is_err());
        assert!(parse_usd("1e5").is_err());
    }

    #[test]
    fn reference_table() {
        let t = table1();
        assert_eq!(t.cells.len(), 6);
        let flagged: Vec<&CostCell> = t.cells.iter().filter(|c| c.discrepancy.is_some()).collect();
        assert_eq!(flagged.len(), 1);
        assert_eq!(flagged[0].cost.qubits, 200_000_000);
        assert_eq!(flagged[0].cost.ppq.ppq_cents, 1);
        assert_eq!(flagged[0].formatted, "$2 Million");
        for c in t.cells.iter().filter(|c| c.cost.ppq.ppq_cents >= 100) {
            assert_eq!(c.reference.as_deref(), Some(c.formatted.as_str()));
        }
        let text = t.to_text();
        assert!(text.contains("$2 Million *"));
        let csv = t.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 7);
        assert!(cost_table(&[], &[usd(1)]).is_err());
        assert_eq!(cost_table(&[5], &[usd(1)]).unwrap().cells.len(), 1);
    }

    #[test]
    fn json_totals_are_strings() {
        let c = machine_cost(3, &usd(7)).unwrap();
        let j = serde_json::to_string(&c).unwrap();
        assert!(j.contains(r#""total_cents":"21""#));
        assert_eq!(serde_json::from_str::<MachineCost>(&j).unwrap(), c);
    }
}
