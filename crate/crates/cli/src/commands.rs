//! One function per subcommand. Each returns the JSON document and the table
//! text; `main` picks one.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use khovlab::bounds::{default_window, threshold_report_from, EmpiricalStatus, EMPIRICAL_CAVEAT};
use khovlab::polynomial::{detect_stabilization, finite_differences};
use khovlab::polytope::{closedness_report, sandwich_rows, ClosednessReport, HullSpec};
use khovlab::rational::{self, Rational};
use khovlab::suite::{self, Level};
use khovlab::{factor_vector, primes_upto, Error, RationalPolynomial};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::source::{polytope_guard, Source};
use crate::{Command, LevelArg, SCHEMA_VERSION};

pub struct Output {
    pub json: Value,
    pub table: String,
    /// False makes the process exit with status 1.
    pub ok: bool,
}

fn document(command: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema_version".into(), SCHEMA_VERSION.into());
    map.insert("command".into(), command.into());
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

fn rat(x: &Rational) -> Value {
    #[derive(Serialize)]
    struct R<'a>(#[serde(with = "rational::json")] &'a Rational);
    serde_json::to_value(R(x)).expect("rationals serialize")
}

fn rats(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rat).collect())
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn polynomial_json(p: &RationalPolynomial) -> Value {
    json!({
        "coefficients": rats(p.coefficients()),
        "binomial_coefficients": rats(&p.binomial_coefficients()),
        "display": p.to_string(),
        "display_binomial": p.display_binomial(),
    })
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run(command: &Command, src: &mut Source) -> Result<Output> {
    match *command {
        Command::Mn { n } => mn(n),
        Command::Pkn { n, k } => pkn(src, n, k),
        Command::Sequence { n, kmax } => sequence(src, n, kmax),
        Command::Fit { n, kmax, window } => fit(src, n, kmax, window),
        Command::Ehrhart { n } => ehrhart(src, n),
        Command::Sandwich { n, kmax } => sandwich(src, n, kmax),
        Command::Closedness {
            n,
            ref halfspace,
            kmax,
        } => closedness(n, halfspace.as_deref(), kmax),
        Command::Threshold { n, kmax } => threshold(src, n, kmax),
        Command::Verify { nmax, level } => verify(nmax, level),
    }
}

fn mn(n: u64) -> Result<Output> {
    let basis = primes_upto(n)?;
    let mut elements = Vec::new();
    let mut table = format!(
        "M_{n}: primes [{}], d = {}\n{:>8}  vector\n",
        joined(basis.primes()),
        basis.dim(),
        "value"
    );
    for m in 1..=n {
        let v = factor_vector(m, &basis)?;
        writeln!(table, "{m:>8}  {v}")?;
        elements.push(json!({ "value": m, "vector": v }));
    }
    let body = json!({
        "n": n,
        "primes": basis.primes(),
        "d": basis.dim(),
        "elements": elements,
    });
    Ok(Output {
        json: document("mn", body),
        table,
        ok: true,
    })
}

fn pkn(src: &mut Source, n: u64, k: usize) -> Result<Output> {
    let p = src.growth(n, k)?[k];
    Ok(Output {
        json: document("pkn", json!({ "n": n, "k": k, "p": p })),
        table: format!("{p}\n"),
        ok: true,
    })
}

fn sequence(src: &mut Source, n: u64, kmax: usize) -> Result<Output> {
    let d = primes_upto(n)?.dim();
    let values = src.growth(n, kmax)?;
    let wide: Vec<i128> = values.iter().map(|&v| v.into()).collect();
    let mut table = format!("n = {n}, d = {d}\n{:>6}  {}\n", "p", joined(&values));
    let mut differences = Vec::new();
    for order in 1..=(d + 1).min(wide.len().saturating_sub(1)) {
        let diff = finite_differences(&wide, order)?;
        writeln!(table, "{:>6}  {}", format!("D^{order}"), joined(&diff))?;
        let diff: Vec<Value> = diff.iter().map(|&x| json!(i64::try_from(x).ok())).collect();
        differences.push(json!({ "order": order, "values": diff }));
    }
    let body = json!({
        "n": n,
        "d": d,
        "kmax": kmax,
        "values": values,
        "differences": differences,
    });
    Ok(Output {
        json: document("sequence", body),
        table,
        ok: true,
    })
}

fn fit(src: &mut Source, n: u64, kmax: usize, window: Option<usize>) -> Result<Output> {
    let d = primes_upto(n)?.dim();
    let window = window.unwrap_or_else(|| default_window(d));
    if window == 0 {
        bail!(Error::InvalidInput("window must be positive".into()));
    }
    let values = src.growth(n, kmax)?;
    let (status, found) = match detect_stabilization(&values, d, window) {
        Ok(Some(r)) => (EmpiricalStatus::Found, Some(r)),
        Ok(None) => (EmpiricalStatus::NotFound, None),
        Err(Error::InsufficientData { .. }) => (EmpiricalStatus::InsufficientData, None),
        Err(e) => return Err(e.into()),
    };
    let mut body = json!({
        "n": n,
        "d": d,
        "kmax": kmax,
        "window": window,
        "status": status,
        "caveat": EMPIRICAL_CAVEAT,
    });
    let mut table = format!("n = {n}, d = {d}, kmax = {kmax}, window = {window}\n");
    match &found {
        Some(r) => {
            body["threshold"] = json!(r.threshold);
            body["confirmed_upto"] = json!(r.confirmed_upto);
            body["polynomial"] = polynomial_json(&r.polynomial);
            writeln!(table, "q(k) = {}", r.polynomial)?;
            writeln!(table, "     = {}", r.polynomial.display_binomial())?;
            writeln!(
                table,
                "p(k, {n}) = q(k) observed for {} <= k <= {}",
                r.threshold, r.confirmed_upto
            )?;
        }
        None if status == EmpiricalStatus::NotFound => {
            writeln!(table, "no polynomial of degree <= {d} fits the tail")?;
        }
        None => {
            writeln!(table, "insufficient data: need kmax >= {}", d + window)?;
        }
    }
    writeln!(table, "note: {EMPIRICAL_CAVEAT}")?;
    Ok(Output {
        json: document("fit", body),
        table,
        ok: true,
    })
}

fn ehrhart(src: &mut Source, n: u64) -> Result<Output> {
    let d = src.spec(n)?.dim();
    let e = src.ehrhart(n)?;
    let body = json!({
        "n": n,
        "d": d,
        "counts": e.counts,
        "polynomial": polynomial_json(&e.polynomial),
        "volume": rat(&e.volume),
    });
    let table = format!(
        "L(Q_{n}, t) = {}\n           = {}\nvolume = {}\nL(Q_{n}, t) for t = 0..={d}: {}\n",
        e.polynomial,
        e.polynomial.display_binomial(),
        rational::display(&e.volume),
        joined(&e.counts),
    );
    Ok(Output {
        json: document("ehrhart", body),
        table,
        ok: true,
    })
}

fn sandwich(src: &mut Source, n: u64, kmax: u64) -> Result<Output> {
    if kmax == 0 {
        bail!(Error::InvalidInput("kmax must be positive".into()));
    }
    let spec = src.spec(n)?;
    let d = spec.dim() as u64;
    let growth = src.growth(n, (kmax + d) as usize)?;
    let rows = sandwich_rows(&spec, &growth, kmax);
    let ok = rows.iter().all(|r| r.ok);
    let mut table = format!(
        "n = {n}, d = {d}\n{:>4} {:>12} {:>12} {:>12}  ok\n",
        "k", "p(k,n)", "L(Q_n,k)", "p(k+d,n)"
    );
    for r in &rows {
        writeln!(
            table,
            "{:>4} {:>12} {:>12} {:>12}  {}",
            r.k,
            r.products,
            r.lattice,
            r.products_shifted,
            if r.ok { "yes" } else { "NO" }
        )?;
    }
    let body = json!({ "n": n, "d": d, "kmax": kmax, "all_ok": ok, "rows": rows });
    Ok(Output {
        json: document("sandwich", body),
        table,
        ok,
    })
}

fn parse_halfspace(text: &str) -> Result<(Vec<i64>, i64)> {
    let (lhs, rhs) = text
        .split_once(':')
        .context("half-space must look like c1,c2,...:r")?;
    let coeffs = lhs
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("bad coefficient list {lhs:?}"))?;
    let rhs = rhs
        .trim()
        .parse::<i64>()
        .with_context(|| format!("bad right-hand side {rhs:?}"))?;
    Ok((coeffs, rhs))
}

fn closedness(n: Option<u64>, halfspace: Option<&str>, kmax: Option<u64>) -> Result<Output> {
    let (spec, polytope) = match (n, halfspace) {
        (Some(n), None) => {
            polytope_guard(n)?;
            (
                HullSpec::exponent_polytope(n)?,
                json!({ "kind": "exponent", "n": n }),
            )
        }
        (None, Some(text)) => {
            let (coeffs, rhs) = parse_halfspace(text)?;
            let spec = HullSpec::halfspace_simplex(&coeffs, rhs)?;
            (
                spec,
                json!({ "kind": "halfspace", "coefficients": coeffs, "rhs": rhs }),
            )
        }
        _ => unreachable!("clap enforces exactly one polytope"),
    };
    let d = spec.dim() as u64;
    let kmax = kmax.unwrap_or_else(|| d.saturating_sub(1).max(1));
    if kmax == 0 {
        bail!(Error::InvalidInput("kmax must be positive".into()));
    }
    let report = closedness_report(&spec, kmax);
    let body = json!({
        "polytope": polytope,
        "d": d,
        "kmax": kmax,
        "closed_for_tested": report.closed_for_tested(),
        "rows": report.rows,
    });
    Ok(Output {
        json: document("closedness", body),
        table: closedness_table(&report, d, kmax)?,
        ok: true,
    })
}

fn closedness_table(report: &ClosednessReport, d: u64, kmax: u64) -> Result<String> {
    const SHOWN: usize = 10;
    let mut t = format!(
        "d = {d}, k = 1..={kmax}\n{:>4} {:>12} {:>12}  closed  witnesses\n",
        "k", "|k*int(Q)|", "|int(kQ)|"
    );
    for r in &report.rows {
        writeln!(
            t,
            "{:>4} {:>12} {:>12}  {:<6}  {}",
            r.k,
            r.star_count,
            r.lattice_count,
            if r.closed { "yes" } else { "no" },
            r.witness_count
        )?;
    }
    for r in report.rows.iter().filter(|r| !r.closed) {
        let shown: Vec<String> = r
            .witnesses
            .iter()
            .take(SHOWN)
            .map(|v| v.to_string())
            .collect();
        let more = if r.witness_count as usize > shown.len() {
            " ..."
        } else {
            ""
        };
        writeln!(t, "k = {} witnesses: {}{more}", r.k, shown.join(" "))?;
    }
    let verdict = if report.closed_for_tested() {
        "closed for every tested k (no claim beyond kmax)"
    } else {
        "not integrally closed"
    };
    writeln!(t, "{verdict}")?;
    Ok(t)
}

fn threshold(src: &mut Source, n: u64, kmax: Option<usize>) -> Result<Output> {
    let spec = src.spec(n)?;
    let d = spec.dim();
    let kmax = kmax.unwrap_or(2 * d + 4);
    let growth = src.growth(n, kmax)?;
    let e = src.ehrhart(n)?;
    let report = threshold_report_from(n, &growth, &e, default_window(d))?;
    let ok = report.verdicts.all_pass();

    let iv = &report.explicit_bound;
    let mut t = format!("n = {n}, d = {d}, kmax = {kmax}\n");
    writeln!(
        t,
        "volume                 {}",
        rational::display(&report.volume)
    )?;
    writeln!(
        t,
        "volume bound           [{}, {}]",
        rational::display(report.volume_bound.lo()),
        rational::display(report.volume_bound.hi())
    )?;
    writeln!(
        t,
        "GSW bound              {}",
        rational::display(&report.gsw_exact)
    )?;
    writeln!(
        t,
        "explicit bound         ceiling {} from [{}, {}] at {} bits",
        rational::display(&report.explicit_ceiling),
        rational::display(iv.lo()),
        rational::display(iv.hi()),
        iv.bits()
    )?;
    match &report.empirical {
        Some(r) => writeln!(
            t,
            "empirical threshold    {} (confirmed up to k = {}, certified: {})",
            r.threshold, r.confirmed_upto, report.certified
        )?,
        None => writeln!(t, "empirical threshold    {:?}", report.empirical_status)?,
    }
    writeln!(
        t,
        "verdicts               {}",
        if ok { "all pass" } else { "FAILED" }
    )?;
    writeln!(t, "note: {}", report.caveat)?;
    Ok(Output {
        json: document("threshold", to_json(&report)),
        table: t,
        ok,
    })
}

fn verify(nmax: u64, level: LevelArg) -> Result<Output> {
    let level = match level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let checks = suite::run(nmax, level)?;
    let ok = checks.iter().all(|c| c.passed);
    let mut t = String::new();
    for c in &checks {
        writeln!(
            t,
            "[{}] {:>2} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.detail
        )?;
    }
    writeln!(
        t,
        "{}/{} checks passed",
        checks.iter().filter(|c| c.passed).count(),
        checks.len()
    )?;
    let body = json!({
        "nmax": nmax,
        "level": level,
        "passed": ok,
        "checks": checks,
    });
    Ok(Output {
        json: document("verify", body),
        table: t,
        ok,
    })
}
