//! CSV tables, pass/fail checks and plot scripts.

use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Seventeen significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_cell(c: &Cell) -> String {
    match c {
        Cell::Num(x) => fmt_num(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(fmt_cell).collect();
            s += &cells.join(",");
            s.push('\n');
        }
        s
    }
}

/// One pass/fail line: `lower <= measured <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    /// Acceptance criterion, or 0 for checks of a single configured run.
    pub criterion: u8,
    pub case: String,
    pub quantity: &'static str,
    pub measured: f64,
    pub target: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Check {
    pub fn within(criterion: u8, case: impl Into<String>, quantity: &'static str, measured: f64, target: f64, tol: f64) -> Self {
        Self { criterion, case: case.into(), quantity, measured, target, lower: target - tol, upper: target + tol }
    }

    pub fn at_most(criterion: u8, case: impl Into<String>, quantity: &'static str, measured: f64, bound: f64) -> Self {
        Self { criterion, case: case.into(), quantity, measured, target: bound, lower: f64::NEG_INFINITY, upper: bound }
    }

    /// Strict lower bound.
    pub fn above(criterion: u8, case: impl Into<String>, quantity: &'static str, measured: f64, bound: f64) -> Self {
        Self { criterion, case: case.into(), quantity, measured, target: bound, lower: bound.next_up(), upper: f64::INFINITY }
    }

    pub fn in_range(criterion: u8, case: impl Into<String>, quantity: &'static str, measured: f64, lo: f64, hi: f64) -> Self {
        Self { criterion, case: case.into(), quantity, measured, target: f64::NAN, lower: lo, upper: hi }
    }

    pub fn pass(&self) -> bool {
        self.measured >= self.lower && self.measured <= self.upper
    }
}

pub const CHECK_HEADER: [&str; 8] = ["criterion", "case", "quantity", "measured", "target", "lower", "upper", "pass"];

pub fn check_table(checks: &[Check]) -> Table {
    let mut t = Table::new(&CHECK_HEADER);
    for c in checks {
        t.push(vec![
            Cell::Int(c.criterion as i64),
            c.case.clone().into(),
            c.quantity.into(),
            c.measured.into(),
            c.target.into(),
            c.lower.into(),
            c.upper.into(),
            c.pass().into(),
        ]);
    }
    t
}

/// Axis scaling of a plot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axes {
    Linear,
    LogX,
    LogY,
    LogLog,
}

/// A gnuplot script drawing columns of `<stem>.csv`; each series is `(x column, y column)`, 1-based.
pub fn plot_script(
    stem: &str,
    title: &str,
    axes: Axes,
    xlabel: &str,
    ylabel: &str,
    header: &[&str],
    series: &[(usize, usize)],
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    match axes {
        Axes::Linear => {}
        Axes::LogX => _ = writeln!(s, "set logscale x"),
        Axes::LogY => _ = writeln!(s, "set logscale y"),
        Axes::LogLog => _ = writeln!(s, "set logscale xy"),
    }
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s, "set output '{stem}.png'");
    let parts: Vec<String> = series
        .iter()
        .map(|&(x, y)| {
            let name = header.get(y - 1).copied().unwrap_or("value");
            format!("'{stem}.csv' using {x}:(abs(${y})) with linespoints title '{name}'")
        })
        .collect();
    let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_format() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![0.1.into(), Cell::Int(3), "x,y".into()]);
        assert_eq!(t.to_csv(), "a,b,c\n1.0000000000000001e-1,3,\"x,y\"\n");
        assert_eq!(fmt_num(-2.5), "-2.5000000000000000e0");
    }

    #[test]
    fn check_bounds() {
        assert!(Check::within(1, "c", "q", 1.05, 1.0, 0.1).pass());
        assert!(!Check::within(1, "c", "q", f64::NAN, 1.0, 0.1).pass());
        assert!(!Check::above(1, "c", "q", 0.0, 0.0).pass());
        assert!(Check::above(1, "c", "q", 1e-300, 0.0).pass());
        assert!(Check::at_most(1, "c", "q", 1e-13, 1e-12).pass());
    }

    #[test]
    fn plot_mentions_columns() {
        let s = plot_script("decay", "t", Axes::LogLog, "t", "norm", &["t", "small"], &[(1, 2)]);
        assert!(s.contains("'decay.csv' using 1:(abs($2))"));
        assert!(s.contains("set logscale xy"));
    }
}
