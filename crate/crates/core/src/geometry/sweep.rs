use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ideal_triangulation, solve_diagram, solve_with_retries, triangulation_seed, Classification, Filling, GeometryError, HyperbolicSolution, SolverConfig};
use crate::diagram::LinkDiagram;
use crate::triangulation::Triangulation;

/// `a·n + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine {
    pub a: i64,
    pub b: i64,
}

impl Affine {
    pub fn at(&self, n: i64) -> i64 {
        self.a * n + self.b
    }

    fn parse(s: &str) -> Option<Affine> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).map(str::to_string).unwrap_or(s);
        if s.is_empty() {
            return None;
        }
        let mut out = Affine { a: 0, b: 0 };
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ if std::ptr::eq(rest, s.as_str()) => (1, rest),
                _ => return None,
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if let Some(coef) = term.strip_suffix('n') {
                let c = if coef.is_empty() { 1 } else { coef.strip_suffix('*').unwrap_or(coef).parse().ok()? };
                out.a += sign * c;
            } else {
                out.b += sign * term.parse::<i64>().ok()?;
            }
        }
        Some(out)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, b) => write!(f, "{b}"),
            (a, 0) => write!(f, "{}n", coef(a)),
            (a, b) => write!(f, "({}n{}{})", coef(a), if b < 0 { '-' } else { '+' }, b.abs()),
        }
    }
}

fn coef(a: i64) -> String {
    match a {
        1 => String::new(),
        -1 => "-".into(),
        a => a.to_string(),
    }
}

/// Slopes `p(n)/q(n)` with `p`, `q` affine in `n`, written like `-1/n` or
/// `(2n+1)/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeFamily {
    pub p: Affine,
    pub q: Affine,
}

impl SlopeFamily {
    pub fn parse(s: &str) -> Result<SlopeFamily, GeometryError> {
        let bad = || GeometryError::BadFamily(s.to_string());
        let (p, q) = s.split_once('/').ok_or_else(bad)?;
        let fam = SlopeFamily { p: Affine::parse(p).ok_or_else(bad)?, q: Affine::parse(q).ok_or_else(bad)? };
        // p² + q² must grow without bound.
        if fam.p.a == 0 && fam.q.a == 0 {
            return Err(bad());
        }
        Ok(fam)
    }

    pub fn at(&self, n: i64) -> (i64, i64) {
        (self.p.at(n), self.q.at(n))
    }
}

impl fmt::Display for SlopeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: i64,
    pub slope: (i64, i64),
    pub classification: Classification,
    pub volume: Option<f64>,
    pub residual: f64,
}

impl SweepRow {
    fn usable_volume(&self) -> Option<f64> {
        match self.classification {
            Classification::Geometric | Classification::Nongeometric => self.volume,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepVerdict {
    /// Volumes strictly increase across the whole range.
    pub increasing: bool,
    /// Every volume lies below the complete volume.
    pub below_complete: bool,
    /// First `n` from which the remaining rows (at least two) are strictly
    /// increasing and below the complete volume.
    pub monotone_from: Option<i64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub cusp: usize,
    pub family: String,
    pub fillings: Vec<String>,
    pub complete_classification: Classification,
    pub complete_volume: Option<f64>,
    pub rows: Vec<SweepRow>,
    pub verdict: SweepVerdict,
}

/// Fills `cusp` along `family(n)` for each `n` in `range`, the other cusps
/// as in `fillings` (whose entry at `cusp` is ignored).
///
/// The complete structure at `cusp` is solved first; its shapes seed every
/// filled solve. Rows that cannot be solved are recorded as `FAILED`.
pub fn fill_sweep(
    tri: &Triangulation,
    cusp: usize,
    family: &SlopeFamily,
    range: RangeInclusive<i64>,
    fillings: &[Filling],
    cfg: &SolverConfig,
    tol: f64,
) -> Result<SweepReport, GeometryError> {
    if cusp >= fillings.len() {
        return Err(GeometryError::NoSuchCusp(cusp));
    }
    let mut base = fillings.to_vec();
    base[cusp] = Filling::Complete;
    let complete = solve_with_retries(tri, &base, None, cfg, cfg.retriangulations)?;
    let reference = complete.triangulation().clone();
    let seed: &HyperbolicSolution = &complete.solution;

    let rows: BTreeMap<i64, SweepRow> = range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| {
            let (p, q) = family.at(n);
            let mut f = base.clone();
            f[cusp] = Filling::Slope { p, q };
            let row = match solve_with_retries(&reference, &f, Some(seed), cfg, cfg.retriangulations) {
                Ok(s) => SweepRow {
                    n,
                    slope: (p, q),
                    classification: s.solution.classification,
                    volume: s.solution.volume,
                    residual: s.solution.residual,
                },
                Err(_) => SweepRow { n, slope: (p, q), classification: Classification::Failed, volume: None, residual: f64::INFINITY },
            };
            (n, row)
        })
        .collect();
    let rows: Vec<SweepRow> = rows.into_values().collect();

    let complete_volume = match complete.solution.classification {
        Classification::Geometric | Classification::Nongeometric => complete.solution.volume,
        _ => None,
    };
    let verdict = verdict(&rows, complete_volume, tol);
    Ok(SweepReport {
        cusp,
        family: family.to_string(),
        fillings: fillings.iter().enumerate().map(|(i, f)| if i == cusp { family.to_string() } else { f.to_string() }).collect(),
        complete_classification: complete.solution.classification,
        complete_volume,
        rows,
        verdict,
    })
}

/// [`fill_sweep`] on a triangulation of `d` whose complete structure at
/// `cusp` is geometric, trying fresh triangulations as [`solve_diagram`]
/// does. Rows that still come out non-geometric are solved again from
/// scratch with [`solve_diagram`] and replaced if that does better.
pub fn fill_sweep_diagram(
    d: &LinkDiagram,
    cusp: usize,
    family: &SlopeFamily,
    range: RangeInclusive<i64>,
    fillings: &[Filling],
    cfg: &SolverConfig,
    tol: f64,
) -> Result<SweepReport, GeometryError> {
    let mut best: Option<SweepReport> = None;
    for k in 0..=cfg.fresh_triangulations {
        let t = ideal_triangulation(d, triangulation_seed(cfg, k))?;
        let r = fill_sweep(&t, cusp, family, range.clone(), fillings, cfg, tol)?;
        let done = r.complete_classification == Classification::Geometric;
        if best.as_ref().is_none_or(|b| class_rank(r.complete_classification) < class_rank(b.complete_classification)) {
            best = Some(r);
        }
        if done {
            break;
        }
    }
    let mut report = best.expect("at least one triangulation");
    let redo: Vec<usize> = (0..report.rows.len()).filter(|&i| report.rows[i].classification != Classification::Geometric).collect();
    let fresh: Vec<(usize, Option<SweepRow>)> = redo
        .into_par_iter()
        .map(|i| {
            let row = &report.rows[i];
            let mut f = fillings.to_vec();
            f[cusp] = Filling::Slope { p: row.slope.0, q: row.slope.1 };
            let again = solve_diagram(d, &f, cfg).ok().map(|s| SweepRow {
                n: row.n,
                slope: row.slope,
                classification: s.solution.classification,
                volume: s.solution.volume,
                residual: s.solution.residual,
            });
            (i, again)
        })
        .collect();
    for (i, row) in fresh {
        match row {
            Some(row) if class_rank(row.classification) < class_rank(report.rows[i].classification) => report.rows[i] = row,
            _ => {}
        }
    }
    report.verdict = verdict(&report.rows, report.complete_volume, tol);
    Ok(report)
}

fn class_rank(c: Classification) -> u8 {
    match c {
        Classification::Geometric => 0,
        Classification::Nongeometric => 1,
        Classification::Degenerate => 2,
        Classification::Failed => 3,
    }
}

fn verdict(rows: &[SweepRow], complete: Option<f64>, tol: f64) -> SweepVerdict {
    let vols: Vec<Option<f64>> = rows.iter().map(SweepRow::usable_volume).collect();
    let below = |v: Option<f64>| matches!((v, complete), (Some(v), Some(c)) if v < c - tol);
    let step = |k: usize| matches!((vols[k], vols[k + 1]), (Some(a), Some(b)) if b > a + tol);
    let increasing = !rows.is_empty() && vols.iter().all(Option::is_some) && (0..rows.len().saturating_sub(1)).all(step);
    let below_complete = !rows.is_empty() && vols.iter().all(|&v| below(v));
    // Walk back from the end while both properties hold.
    let mut start = None;
    if rows.len() >= 2 && below(vols[rows.len() - 1]) {
        let mut k = rows.len() - 1;
        while k > 0 && below(vols[k - 1]) && step(k - 1) {
            k -= 1;
        }
        if k < rows.len() - 1 {
            start = Some(rows[k].n);
        }
    }
    SweepVerdict { increasing, below_complete, monotone_from: start, tolerance: tol }
}

impl SweepReport {
    /// `n,class,volume,residual` with 15 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,class,volume,residual\n");
        for r in &self.rows {
            let v = r.volume.map(sig15).unwrap_or_default();
            out += &format!("{},{},{},{}\n", r.n, r.classification, v, sig15(r.residual));
        }
        out
    }

    pub fn verdict_line(&self) -> String {
        match self.verdict.monotone_from {
            Some(k) => format!("monotone from n = {k}"),
            None => "monotone from n = none".to_string(),
        }
    }
}

/// Rounds to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.14e}").parse().unwrap_or(x)
    } else {
        x
    }
}

/// At most 15 significant digits; exponent form only outside `[1e-5, 1e15)`.
pub fn sig15(x: f64) -> String {
    let r = round15(x);
    if r == 0.0 || !r.is_finite() || (1e-5..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parsing() {
        let f = SlopeFamily::parse("-1/n").unwrap();
        assert_eq!(f.at(3), (-1, 3));
        assert_eq!(f.to_string(), "-1/n");
        let g = SlopeFamily::parse("(2n+1)/n").unwrap();
        assert_eq!(g.at(4), (9, 4));
        assert_eq!(SlopeFamily::parse(&g.to_string()).unwrap(), g);
        assert_eq!(SlopeFamily::parse("n/1").unwrap().at(7), (7, 1));
        assert_eq!(SlopeFamily::parse("3-2n/1").unwrap().at(2), (-1, 1));
        for bad in ["", "-1", "1/2", "x/n", "n/", "2n++1/1"] {
            assert!(SlopeFamily::parse(bad).is_err(), "{bad}");
        }
    }

    fn row(n: i64, v: Option<f64>) -> SweepRow {
        let c = if v.is_some() { Classification::Geometric } else { Classification::Failed };
        SweepRow { n, slope: (-1, n), classification: c, volume: v, residual: 0.0 }
    }

    #[test]
    fn verdict_finds_first_index_of_monotone_tail() {
        let rows = vec![row(1, Some(2.5)), row(2, None), row(3, Some(1.0)), row(4, Some(2.0)), row(5, Some(2.9))];
        let v = verdict(&rows, Some(3.0), 1e-9);
        assert!(!v.increasing && !v.below_complete);
        assert_eq!(v.monotone_from, Some(3));
        let v = verdict(&rows[2..], Some(3.0), 1e-9);
        assert!(v.increasing && v.below_complete);
        assert_eq!(v.monotone_from, Some(3));
        assert_eq!(verdict(&rows[2..], Some(2.5), 1e-9).monotone_from, None);
        assert_eq!(verdict(&rows[..1], Some(3.0), 1e-9).monotone_from, None);
    }

    #[test]
    fn csv_uses_fifteen_digits() {
        assert_eq!(sig15(3.663862376708876), "3.66386237670888");
        assert_eq!(sig15(1.4217791915866741e-15), "1.42177919158667e-15");
        assert_eq!(sig15(-2.0), "-2");
        assert_eq!(round15(2.0), 2.0);
        assert!(round15(f64::NAN).is_nan());
    }
}
