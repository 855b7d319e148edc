use std::path::{Path, PathBuf};

use anyhow::Context;

use annulus_bvp::catalog::{self, CASES};
use annulus_bvp::certify::{self, Certificate, Window};
use annulus_bvp::eigen::{first_eigen_fd, first_eigen_shoot, EigenResult, ShootConfig};
use annulus_bvp::expr::{Bindings, Expr, VarSet};
use annulus_bvp::grid::GridFunction;
use annulus_bvp::reduction::ReducedBvp;
use annulus_bvp::solver::{picard_solve, shoot_solve, sweep, SolveMethod, SolveReport, SweepConfig};
use annulus_bvp::verify::{check_conclusion, verify_solution, Tolerances, VerificationReport};

use crate::output::{self, csv, num, svg_chart, Series};
use crate::problem::{load, Problem};
use crate::{Command, Failed, InputError};

pub fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Reduce { file, points, csv } => reduce(&file, points, csv.as_deref()),
        Command::Certify { file, window } => certify_cmd(&file, window.as_deref()),
        Command::Eigen { file, b, method, n, csv, svg } => eigen(&file, b.as_deref(), &method, n, csv.as_deref(), svg.as_deref()),
        Command::Solve { file, lambda, method, csv, svg } => solve(&file, lambda, method.as_deref(), csv.as_deref(), svg.as_deref()),
        Command::Sweep { file, lambdas, from, to, steps, method, csv, svg } => {
            let lambdas = match (lambdas, from) {
                (Some(_), Some(_)) => return Err(InputError("give either --lambdas or --from/--to/--steps".into()).into()),
                (Some(l), None) => Some(l),
                (None, Some(from)) => Some(range(from, to.expect("clap requires --to"), steps.expect("clap requires --steps"))?),
                (None, None) => None,
            };
            sweep_cmd(&file, lambdas, method.as_deref(), csv.as_deref(), svg.as_deref())
        }
        Command::Examples { id } => examples(id.as_deref()),
        Command::Verify { file, solution, lambda } => verify_cmd(&file, &solution, lambda),
    }
}

fn range(from: f64, to: f64, steps: usize) -> anyhow::Result<Vec<f64>> {
    if steps < 2 || !(from.is_finite() && to.is_finite()) {
        return Err(InputError("a range needs finite ends and --steps >= 2".into()).into());
    }
    Ok((0..steps).map(|i| if i + 1 == steps { to } else { from + (to - from) * i as f64 / (steps - 1) as f64 }).collect())
}

fn header(problem: &Problem) {
    if let Some(d) = &problem.description {
        println!("# {d}");
    }
}

fn reduce(file: &Path, points: usize, csv_path: Option<&Path>) -> anyhow::Result<()> {
    let problem = load(file)?;
    header(&problem);
    if points < 2 {
        return Err(InputError("--points must be at least 2".into()).into());
    }
    let bvp = problem.bvp()?;
    let annulus = problem.annulus()?;
    let map = match &annulus {
        Some(a) => {
            let map = a.radial_map()?;
            let (r1, r2) = a.radii();
            println!("annulus N = {}, {r1} < |x| < {r2}", a.dim());
            match map.constants() {
                Some((a, b)) => println!("t = B - A r^-(N-2), A = {}, B = {}", num(a), num(b)),
                None => println!("r = r2 (r1/r2)^t, t = 0 at r = r2"),
            }
            println!("r(t) is {}", if map.is_increasing() { "increasing" } else { "decreasing" });
            Some(map)
        }
        None => {
            println!("interval problem, q given directly");
            None
        }
    };
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let t = if i + 1 == points { 1.0 } else { i as f64 / (points - 1) as f64 };
        let r = map.as_ref().map(|m| m.t_to_r(t)).transpose()?;
        rows.push(vec![Some(t), r, Some(bvp.q(t)?)]);
    }
    let table = csv(&["t", "r", "q"], &rows);
    match csv_path {
        Some(p) => output::write(p, &table)?,
        None => print!("{table}"),
    }
    Ok(())
}

fn certificate(problem: &Problem, bvp: &ReducedBvp, window: Window) -> anyhow::Result<Certificate> {
    let cert = match window {
        Window::SmallNormLargeLambda => certify::certify_small_norm_large_lambda(bvp, problem.ratio_input(window)?),
        Window::SmallNormSmallLambda => certify::certify_small_norm_small_lambda(bvp, problem.ratio_input(window)?),
        Window::LargeNormLargeLambda => certify::certify_large_norm_large_lambda(bvp, problem.ratio_input(window)?),
        Window::LargeNormSmallLambda => certify::certify_large_norm_small_lambda(bvp, problem.ratio_input(window)?),
        Window::EigenSuperlinear => certify::certify_eigen_superlinear(bvp, &problem.eigen_input()?),
        Window::EigenSublinear => certify::certify_eigen_sublinear(bvp, &problem.eigen_input()?),
    };
    Ok(cert?)
}

fn print_certificate(cert: &Certificate) {
    let range = &cert.range;
    println!("window      {}", range.window);
    println!("range       {}  (open)", range);
    println!("conclusion  {}", range.conclusion());
    let inputs = &range.inputs;
    if let Some(radius) = inputs.radius {
        println!("radius      {}", num(radius));
    }
    if let Some(ratio) = &inputs.ratio {
        let how = if ratio.overridden { "override" } else { "sampled" };
        println!("{:<11} {} ({how})", ratio.symbol, num(ratio.used));
        if let Some(stats) = &ratio.computed {
            println!(
                "  sampled   {} at t = {}, u = {} on u in [{}, {}]",
                num(stats.value),
                stats.arg_t,
                stats.arg_u,
                stats.u_range.0,
                stats.u_range.1
            );
        }
    }
    if let Some((i, (a, b))) = inputs.integral {
        println!("integral    {} over [{a}, {b}]", num(i));
    }
    if let Some(l) = inputs.lambda1 {
        println!("lambda1     {}", num(l));
    }
    if let (Some(c), Some(d)) = (inputs.c, inputs.delta) {
        println!("c, delta    {c}, {d}");
    }
    for h in &cert.hypotheses {
        let status = if h.holds { "holds" } else { "FAILS" };
        print!("check       {status}  {}  ({} samples, worst t = {}, u = {}, margin {:.3e}", h.hypothesis, h.samples, h.witness.t, h.witness.u, h.witness.margin);
        match h.trend {
            Some(trend) => println!(", {trend})"),
            None => println!(")"),
        }
    }
    for w in &cert.warnings {
        println!("warning     {w}");
    }
}

fn certify_cmd(file: &Path, window: Option<&str>) -> anyhow::Result<()> {
    let problem = load(file)?;
    header(&problem);
    let bvp = problem.bvp()?;
    let window = problem.window(window)?;
    let cert = certificate(&problem, &bvp, window)?;
    print_certificate(&cert);
    Ok(())
}

fn eigen(file: &Path, b: Option<&str>, method: &str, n: usize, csv_path: Option<&Path>, svg: Option<&Path>) -> anyhow::Result<()> {
    let problem = load(file)?;
    header(&problem);
    let bvp = problem.bvp()?;
    let b_src = b.or(problem.b.as_deref()).unwrap_or("1");
    let b = Expr::parse(b_src, VarSet::T).map_err(|e| InputError(format!("b: {e}")))?;
    let m = |t: f64| -> annulus_bvp::Result<f64> { Ok(bvp.q(t)? * b.eval(&Bindings::t(t))?) };
    let result: EigenResult = match method {
        "fd" => first_eigen_fd(m, n)?,
        _ => first_eigen_shoot(m, ShootConfig::default())?,
    };
    println!("lambda1   {}", num(result.lambda1));
    println!("method    {}", result.method.name());
    println!("residual  {:.3e}", result.residual);
    println!("grid      {}", result.grid_n);
    if let Some((coarse, fine)) = result.richardson {
        println!("coarse    {}", num(coarse));
        println!("fine      {}", num(fine));
    }
    let rows: Vec<Vec<Option<f64>>> = result.phi.iter().map(|(t, v)| vec![Some(t), Some(v)]).collect();
    if let Some(p) = csv_path {
        output::write(p, &csv(&["t", "phi"], &rows))?;
    }
    if let Some(p) = svg {
        let series = Series { label: "phi".into(), points: result.phi.iter().collect(), scatter: false };
        output::write(p, &svg_chart(&[series], "t", "phi"))?;
    }
    Ok(())
}

fn print_verification(report: &VerificationReport) {
    for check in &report.checks {
        println!("  {check}");
    }
    if report.trivial {
        println!("  note: trivial solution");
    }
}

fn solve(file: &Path, lambda: Option<f64>, method: Option<&str>, csv_path: Option<&Path>, svg: Option<&Path>) -> anyhow::Result<()> {
    let problem = load(file)?;
    header(&problem);
    let bvp = problem.bvp()?;
    let lambda = problem.lambda(lambda)?;
    let method = problem.method(method)?;
    let reports: Vec<SolveReport> = match method {
        SolveMethod::Picard => vec![picard_solve(&bvp, lambda, None, problem.picard())?],
        SolveMethod::Shooting => shoot_solve(&bvp, lambda, problem.shooting())?,
    };
    let window = match &problem.window {
        Some(_) => Some(problem.window(None)?),
        None => None,
    };
    let cert = window.map(|w| certificate(&problem, &bvp, w)).transpose()?;

    if reports.is_empty() {
        println!("no positive solution found in the slope scan at lambda = {lambda}");
    }
    let mut problems = Vec::new();
    for (k, r) in reports.iter().enumerate() {
        println!("solution {} ({}, lambda = {})", k + 1, r.method.name(), lambda);
        println!("  sup norm          {}", num(r.sup_norm));
        println!("  min on [1/4,3/4]  {}", num(r.min_on_quarter));
        if let Some(s) = r.slope {
            println!("  slope u'(0)       {}", num(s));
        }
        println!("  iterations        {}", r.iterations);
        println!("  converged         {}", r.converged);
        let v = verify_solution(&r.u, lambda, &bvp, Tolerances::default());
        print_verification(&v);
        if let Some(cert) = &cert {
            let c = check_conclusion(r, &cert.range);
            let status = if c.passed() { "pass" } else { "FAIL" };
            println!(
                "  window {}: {status} (lambda in range: {}, margin {:.6e}; norm margin {:.6e})",
                cert.range.window, c.lambda_in_range, c.lambda_margin, c.norm_margin
            );
        }
        if !r.converged {
            problems.push(format!("solution {} did not converge", k + 1));
        } else if !v.passed() {
            problems.push(format!("solution {} failed verification", k + 1));
        }
    }

    if !reports.is_empty() {
        let n = reports[0].u.len();
        let mut cols = vec!["t".to_string()];
        cols.extend((1..=reports.len()).map(|k| if reports.len() == 1 { "u".to_string() } else { format!("u{k}") }));
        let rows: Vec<Vec<Option<f64>>> = (0..n)
            .map(|i| std::iter::once(Some(reports[0].u.t(i))).chain(reports.iter().map(|r| Some(r.u.values()[i]))).collect())
            .collect();
        if let Some(p) = csv_path {
            let names: Vec<&str> = cols.iter().map(String::as_str).collect();
            output::write(p, &csv(&names, &rows))?;
        }
        if let Some(p) = svg {
            let series: Vec<Series> = reports
                .iter()
                .zip(&cols[1..])
                .map(|(r, name)| Series { label: name.clone(), points: r.u.iter().collect(), scatter: false })
                .collect();
            output::write(p, &svg_chart(&series, "t", "u"))?;
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failed(problems.join("; ")).into())
    }
}

fn sweep_cmd(file: &Path, lambdas: Option<Vec<f64>>, method: Option<&str>, csv_path: Option<&Path>, svg: Option<&Path>) -> anyhow::Result<()> {
    let problem = load(file)?;
    let bvp = problem.bvp()?;
    let lambdas = lambdas
        .or_else(|| problem.lambdas.clone())
        .ok_or_else(|| InputError("no lambdas: pass --lambdas, --from/--to/--steps or set `lambdas`".into()))?;
    let method = problem.method(method)?;
    let config = SweepConfig { picard: problem.picard(), shooting: problem.shooting() };
    let rows = sweep(&bvp, &lambdas, method, &config);

    let mut table = String::from("lambda,count,sup_norm,min_on_quarter,error\n");
    let mut points = Vec::new();
    for row in &rows {
        match &row.outcome {
            Ok(sols) if sols.is_empty() => table.push_str(&format!("{},0,,,\n", num(row.lambda))),
            Ok(sols) => {
                for s in sols {
                    table.push_str(&format!("{},{},{},{},\n", num(row.lambda), sols.len(), num(s.sup_norm), num(s.min_on_quarter)));
                    points.push((row.lambda, s.sup_norm));
                }
            }
            Err(e) => table.push_str(&format!("{},0,,,\"{}\"\n", num(row.lambda), e.replace('"', "'"))),
        }
    }
    match csv_path {
        Some(p) => output::write(p, &table)?,
        None => print!("{table}"),
    }
    if let Some(p) = svg {
        let series = Series { label: "sup norm".into(), points, scatter: true };
        output::write(p, &svg_chart(&[series], "lambda", "sup u"))?;
    }
    Ok(())
}

fn examples(id: Option<&str>) -> anyhow::Result<()> {
    let Some(id) = id else {
        for case in CASES {
            println!("{:<4} {:<24} f = {:<12} {}", case.id, case.window.name(), case.f, case.summary);
        }
        return Ok(());
    };
    let case = catalog::find(id).ok_or_else(|| {
        let ids: Vec<_> = CASES.iter().map(|c| c.id).collect();
        InputError(format!("unknown example `{id}` (one of {})", ids.join(", ")))
    })?;
    let outcome = case.run()?;
    println!("{} {}  f = {}", case.id, case.window.name(), case.f);
    println!("{}", case.summary);
    for row in &outcome.rows {
        let status = if row.passed() { "pass" } else { "FAIL" };
        println!(
            "{status}  {:<24} computed {}  expected {}  rel err {:.2e}",
            row.label,
            num(row.computed),
            num(row.expected),
            row.relative_error()
        );
    }
    if outcome.passed() {
        Ok(())
    } else {
        Err(Failed(format!("example {id} does not match its closed form")).into())
    }
}

/// Reads a `t,u,...` CSV and keeps the first value column.
fn read_solution(path: &PathBuf) -> anyhow::Result<GridFunction> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let head = lines.next().ok_or_else(|| InputError(format!("{} is empty", path.display())))?;
    if head.split(',').count() < 2 {
        return Err(InputError(format!("{}: expected a header with t and u columns", path.display())).into());
    }
    let mut ts = Vec::new();
    let mut us = Vec::new();
    for (k, line) in lines.enumerate() {
        let mut cells = line.split(',').map(str::trim);
        let parse = |c: Option<&str>| -> anyhow::Result<f64> {
            let c = c.ok_or_else(|| InputError(format!("{}: row {} is short", path.display(), k + 2)))?;
            c.parse().map_err(|_| InputError(format!("{}: row {}: `{c}` is not a number", path.display(), k + 2)).into())
        };
        ts.push(parse(cells.next())?);
        us.push(parse(cells.next())?);
    }
    let n = ts.len();
    for (i, t) in ts.iter().enumerate() {
        let expected = i as f64 / (n.max(2) - 1) as f64;
        if (t - expected).abs() > 1e-9 {
            return Err(InputError(format!("{}: t values must form the uniform grid i/(n-1); row {} has {t}", path.display(), i + 2)).into());
        }
    }
    GridFunction::new(us).map_err(|e| InputError(e.to_string()).into())
}

fn verify_cmd(file: &Path, solution: &PathBuf, lambda: Option<f64>) -> anyhow::Result<()> {
    let problem = load(file)?;
    header(&problem);
    let bvp = problem.bvp()?;
    let lambda = problem.lambda(lambda)?;
    let u = read_solution(solution)?;
    println!("{} nodes, sup norm {}, lambda {}", u.len(), num(u.sup_norm()), lambda);
    let report = verify_solution(&u, lambda, &bvp, Tolerances::default());
    print_verification(&report);
    if report.passed() {
        println!("verification passed");
        Ok(())
    } else {
        Err(Failed("verification failed".into()).into())
    }
}
