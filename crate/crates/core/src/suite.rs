//! One-shot verification of the checkable claims about `p(k, n)` and `Q_n`.
//!
//! Each check reports a deterministic verdict and detail line (no timings),
//! so a whole run can be compared byte for byte.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::bounds::{self, EmpiricalStatus};
use crate::error::Result;
use crate::lattice::primes_upto;
use crate::oracle::brute_products;
use crate::point::{ExponentVector, PointSet};
use crate::polynomial::detect_stabilization;
use crate::polytope::{
    closedness_report, dilation_lattice_points, ehrhart, hull_membership, sandwich_rows, star_set,
    EhrhartResult, HullSpec,
};
use crate::rational;
use crate::sumset::{growth_sequence_with, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Fast,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Memoizes growth sequences and Ehrhart data per `n` across checks.
#[derive(Default)]
pub struct Workspace {
    growth: HashMap<u64, Vec<u64>>,
    ehrhart: HashMap<u64, EhrhartResult>,
    specs: HashMap<u64, HullSpec>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn spec(&mut self, n: u64) -> Result<&HullSpec> {
        use std::collections::hash_map::Entry;
        Ok(match self.specs.entry(n) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(HullSpec::exponent_polytope(n)?),
        })
    }

    pub fn dim(&mut self, n: u64) -> Result<usize> {
        Ok(self.spec(n)?.dim())
    }

    /// `p(k, n)` for `k = 0..=kmax`.
    pub fn growth(&mut self, n: u64, kmax: usize) -> Result<Vec<u64>> {
        if let Some(g) = self.growth.get(&n) {
            if g.len() > kmax {
                return Ok(g[..=kmax].to_vec());
            }
        }
        let spec = self.spec(n)?;
        let g = growth_sequence_with(spec.generators(), kmax, Strategy::DownsetPruned, None)?;
        self.growth.insert(n, g.values.clone());
        Ok(g.values)
    }

    pub fn ehrhart(&mut self, n: u64) -> Result<EhrhartResult> {
        if let Some(e) = self.ehrhart.get(&n) {
            return Ok(e.clone());
        }
        let e = ehrhart(self.spec(n)?)?;
        self.ehrhart.insert(n, e.clone());
        Ok(e)
    }
}

fn outcome(id: u32, name: &'static str, failures: Vec<String>, summary: String) -> CheckOutcome {
    let passed = failures.is_empty();
    let detail = if passed {
        summary
    } else {
        let shown: Vec<_> = failures.iter().take(5).cloned().collect();
        format!("{} failure(s): {}", failures.len(), shown.join("; "))
    };
    CheckOutcome {
        id,
        name,
        passed,
        detail,
    }
}

/// `|k M_n|` equals the brute-force product count for `2 <= n <= nmax`,
/// `0 <= k <= kmax`.
pub fn oracle_equivalence(ws: &mut Workspace, nmax: u64, kmax: usize) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 2..=nmax {
        let g = ws.growth(n, kmax)?;
        for (k, &count) in g.iter().enumerate() {
            let brute = brute_products(n, k as u64)?;
            cases += 1;
            if brute != count {
                failures.push(format!("p({k},{n}): sumset {count}, products {brute}"));
            }
        }
    }
    Ok(outcome(
        1,
        "oracle_equivalence",
        failures,
        format!("{cases} cases, n in 2..={nmax}, k in 0..={kmax}"),
    ))
}

/// `p(k,2) = k+1`, `p(k,3) = (k+1)(k+2)/2`, `p(k,4) = (k+1)^2`.
type ClosedForm = fn(u64) -> u64;

pub fn closed_forms(ws: &mut Workspace, kmax: usize) -> Result<CheckOutcome> {
    let forms: [(u64, ClosedForm); 3] = [
        (2, |k| k + 1),
        (3, |k| (k + 1) * (k + 2) / 2),
        (4, |k| (k + 1) * (k + 1)),
    ];
    let mut failures = Vec::new();
    for (n, f) in forms {
        let g = ws.growth(n, kmax)?;
        for (k, &v) in g.iter().enumerate() {
            if v != f(k as u64) {
                failures.push(format!("p({k},{n}) = {v}, expected {}", f(k as u64)));
            }
        }
    }
    Ok(outcome(
        2,
        "closed_forms",
        failures,
        format!("n in {{2,3,4}}, k in 0..={kmax}"),
    ))
}

/// The stabilized polynomial for `p(k, n)` has degree exactly `pi(n)`,
/// fitted on `k <= 2 pi(n) + 8`.
pub fn stabilization_degree(ws: &mut Workspace, nmax: u64) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    let mut degrees = Vec::new();
    for n in 1..=nmax {
        let d = ws.dim(n)?;
        let g = ws.growth(n, 2 * d + 8)?;
        match detect_stabilization(&g, d, bounds::default_window(d))? {
            Some(r) if r.polynomial.degree() == Some(d) => degrees.push(d.to_string()),
            Some(r) => failures.push(format!(
                "n = {n}: degree {:?}, expected {d}",
                r.polynomial.degree()
            )),
            None => failures.push(format!("n = {n}: no stabilization up to k = {}", 2 * d + 8)),
        }
    }
    Ok(outcome(
        3,
        "stabilization_degree",
        failures,
        format!("degrees for n = 1..={nmax}: [{}]", degrees.join(",")),
    ))
}

/// Leading coefficient of the stabilized polynomial equals `Vol(Q_n)`.
pub fn leading_coefficient_volume(ws: &mut Workspace, nmax: u64) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    let mut volumes = Vec::new();
    for n in 1..=nmax {
        let d = ws.dim(n)?;
        let g = ws.growth(n, 2 * d + 8)?;
        let e = ws.ehrhart(n)?;
        match detect_stabilization(&g, d, bounds::default_window(d))? {
            Some(r) if r.polynomial.coefficient(d) == e.volume => {
                volumes.push(rational::display(&e.volume))
            }
            Some(r) => failures.push(format!(
                "n = {n}: leading {}, volume {}",
                rational::display(&r.polynomial.coefficient(d)),
                rational::display(&e.volume)
            )),
            None => failures.push(format!("n = {n}: no stabilization")),
        }
    }
    Ok(outcome(
        4,
        "leading_coefficient_volume",
        failures,
        format!("volumes for n = 1..={nmax}: [{}]", volumes.join(",")),
    ))
}

/// `p(k,n) <= L(Q_n,k) <= p(k+d,n)` with `L` counted directly.
pub fn sandwich(ws: &mut Workspace, nmax: u64, kmax: u64) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    let mut rows = 0;
    for n in 1..=nmax {
        let d = ws.dim(n)?;
        let g = ws.growth(n, kmax as usize + d)?;
        let spec = ws.spec(n)?;
        for row in sandwich_rows(spec, &g, kmax) {
            rows += 1;
            if !row.ok {
                failures.push(format!(
                    "n = {n}, k = {}: {} <= {} <= {} fails",
                    row.k, row.products, row.lattice, row.products_shifted
                ));
            }
        }
    }
    Ok(outcome(
        5,
        "sandwich",
        failures,
        format!("{rows} rows, n in 1..={nmax}, k in 1..={kmax}"),
    ))
}

/// The seven listed maximal lattice points of `{6x+10y+15z <= 30}` together
/// with the gap witness `(4,2,1)` at `k = 2`.
pub fn bg_example() -> Result<CheckOutcome> {
    let spec = HullSpec::halfspace_simplex(&[6, 10, 15], 30)?;
    let mut failures = Vec::new();
    let lattice = star_set(&spec, 1);
    let maximal = PointSet::new(3, lattice.maximal_elements())?;
    let listed = PointSet::from_coords(&[
        &[5, 0, 0],
        &[3, 1, 0],
        &[2, 0, 1],
        &[1, 2, 0],
        &[0, 3, 0],
        &[0, 1, 1],
        &[0, 0, 2],
    ])?;
    if maximal != listed {
        failures.push("maximal lattice points differ from the listed seven".to_string());
    }
    let witness = ExponentVector::new(vec![4, 2, 1]);
    if !hull_membership(&witness, &spec, 2)? {
        failures.push("(4,2,1) not in 2Q".to_string());
    }
    let report = closedness_report(&spec, 2);
    if !report.rows[0].closed {
        failures.push("k = 1 not closed".to_string());
    }
    let k2 = &report.rows[1];
    if k2.closed || !k2.witnesses.contains(&witness) {
        failures.push("k = 2 does not exhibit (4,2,1) as a gap witness".to_string());
    }
    Ok(outcome(
        6,
        "bg_simplex_example",
        failures,
        format!(
            "{} lattice points, k = 2: {} in 2*Q vs {} in int(2Q), {} witness(es)",
            lattice.len(),
            k2.star_count,
            k2.lattice_count,
            k2.witness_count
        ),
    ))
}

/// `k M_n = int(k Q_n)` for `1 <= k <= pi(n)`.
pub fn integral_closedness(ws: &mut Workspace, nmax: u64) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=nmax {
        let d = ws.dim(n)? as u64;
        if d == 0 {
            continue;
        }
        let report = closedness_report(ws.spec(n)?, d);
        for row in &report.rows {
            checked += 1;
            if !row.closed {
                let first = row
                    .witnesses
                    .iter()
                    .next()
                    .map(|w| w.to_string())
                    .unwrap_or_default();
                failures.push(format!(
                    "n = {n}, k = {}: {} witness(es), first {first}",
                    row.k, row.witness_count
                ));
            }
        }
    }
    Ok(outcome(
        7,
        "integral_closedness",
        failures,
        format!("{checked} (n, k) pairs, n in 1..={nmax}, k in 1..=pi(n)"),
    ))
}

/// GSW bound, volume bound and empirical threshold against the closed-form
/// threshold, plus the spot values at `n = 2` and `n = 4`.
pub fn bounds_coherence(ws: &mut Workspace, nmax: u64) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    let (c2, iv2) = bounds::explicit_threshold_ceiling(2)?;
    if !(iv2.is_point() && iv2.lo() == &rational::int(3)) {
        failures.push("explicit threshold at n = 2 is not exactly 3".to_string());
    }
    let (c4, _) = bounds::explicit_threshold_ceiling(4)?;
    if c4 != BigInt::from(38) || c2 != BigInt::from(3) {
        failures.push(format!("spot ceilings {c2}, {c4}; expected 3, 38"));
    }
    let mut ceilings = Vec::new();
    for n in 2..=nmax {
        let d = ws.dim(n)?;
        let g = ws.growth(n, 2 * d + 2)?;
        let e = ws.ehrhart(n)?;
        let report = bounds::threshold_report_from(n, &g, &e, bounds::default_window(d))?;
        let v = &report.verdicts;
        if !v.gsw_within_explicit {
            failures.push(format!("n = {n}: GSW bound exceeds closed-form bound"));
        }
        if !v.volume_within_bound {
            failures.push(format!("n = {n}: volume exceeds its bound"));
        }
        if report.empirical_status != EmpiricalStatus::Found {
            failures.push(format!("n = {n}: no empirical threshold"));
        } else if v.empirical_within_explicit != Some(true) {
            failures.push(format!(
                "n = {n}: empirical threshold above closed-form bound"
            ));
        }
        ceilings.push(format!(
            "{n}:{}<={}",
            rational::display(&report.gsw_exact),
            rational::display(&report.explicit_ceiling)
        ));
    }
    Ok(outcome(
        8,
        "bounds_coherence",
        failures,
        format!("gsw<=ceil [{}]", ceilings.join(" ")),
    ))
}

/// `L(Q_n,0) = 1`, `L(Q_n,1) = n`; interpolation matches enumeration at
/// `t = d + 1`.
pub fn ehrhart_sanity(ws: &mut Workspace, nmax: u64, extrapolate_max: u64) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    for n in 1..=nmax {
        let e = ws.ehrhart(n)?;
        if e.counts[0] != 1 {
            failures.push(format!("n = {n}: L(Q,0) = {}", e.counts[0]));
        }
        let l1 = e.counts.get(1).copied().unwrap_or(e.counts[0]);
        if l1 != n {
            failures.push(format!("n = {n}: L(Q,1) = {l1}"));
        }
        if n <= extrapolate_max {
            let d = ws.dim(n)? as u64;
            let direct = dilation_lattice_points(ws.spec(n)?, d + 1).len() as i64;
            let predicted = e.polynomial.eval_int(d as i64 + 1);
            if predicted != rational::int(direct) {
                failures.push(format!(
                    "n = {n}: L(Q,{}) enumerated {direct}, polynomial {}",
                    d + 1,
                    rational::display(&predicted)
                ));
            }
        }
    }
    Ok(outcome(
        9,
        "ehrhart_sanity",
        failures,
        format!("n in 1..={nmax}, extrapolation checked for n <= {extrapolate_max}"),
    ))
}

/// Runs every check with its n-range clipped to `nmax`. `Full` extends the
/// closedness check to `n <= 20`.
pub fn run(nmax: u64, level: Level) -> Result<Vec<CheckOutcome>> {
    primes_upto(nmax.max(1))?;
    let mut ws = Workspace::new();
    let closed_max = match level {
        Level::Fast => 14,
        Level::Full => 20,
    };
    Ok(vec![
        oracle_equivalence(&mut ws, nmax.min(8), 5)?,
        closed_forms(&mut ws, 30)?,
        stabilization_degree(&mut ws, nmax.min(10))?,
        leading_coefficient_volume(&mut ws, nmax.min(12))?,
        sandwich(&mut ws, nmax.min(10), 10)?,
        bg_example()?,
        integral_closedness(&mut ws, nmax.min(closed_max))?,
        bounds_coherence(&mut ws, nmax.min(14))?,
        ehrhart_sanity(&mut ws, nmax.min(14), nmax.min(10))?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let out = run(5, Level::Fast).unwrap();
        assert_eq!(out.len(), 9);
        for c in &out {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn workspace_reuses_longer_sequences() {
        let mut ws = Workspace::new();
        let long = ws.growth(4, 6).unwrap();
        let short = ws.growth(4, 3).unwrap();
        assert_eq!(short, long[..=3].to_vec());
        assert_eq!(short, vec![1, 4, 9, 16]);
    }
}
