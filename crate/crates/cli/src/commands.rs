

use dynseq::baselines::IndexOrigin;
use dynseq::diagnostics::{
    dyadic_block_check, lemma3_sweep, min_energy_report, scan_sequence, theorem3_condition, Lemma3Summary,
};
use dynseq::discrepancy::{star_discrepancy, xn_embed};
use dynseq::greedy::{build_sequence, GreedyConfig, StepRecord};
use dynseq::kernels::{EnergyKernel, Kernel, ProductKernelSpec};
use dynseq::{PointSet, Provenance};
use serde_json::json;

use crate::args::{
    CheckArgs, Columns, DiscrepancyArgs, GenerateArgs, GreedyArgs, InitialArgs, KernelChoice, ScanArgs, TableArgs,
};
use crate::error::{usage, CliError, CliResult};
use crate::io::{self, RunManifest};
use crate::table;

fn initial_set(args: &InitialArgs, dim: Option<usize>) -> CliResult<PointSet> {
    let set = match (&args.initial, &args.initial_file) {
        (Some(values), None) => {
            let d = dim.unwrap_or(1);
            if d == 0 || values.is_empty() || values.len() % d != 0 {
                return Err(usage(format!("--initial needs a positive multiple of {d} coordinates")));
            }
            PointSet::from_flat(d, values.clone(), Provenance::File).map_err(|e| usage(e.to_string()))?
        }
        (None, Some(path)) => io::read_points(path)?,
        _ => return Err(usage("one of --initial or --initial-file is required")),
    };
    if let Some(d) = dim {
        if d != set.dim() {
            return Err(usage(format!("--dim {d} does not match the initial set dimension {}", set.dim())));
        }
    }
    Ok(set)
}

fn greedy_config(args: &GreedyArgs, dim: usize) -> CliResult<GreedyConfig> {
    let terms = args.fourier_m_rule.fixed.unwrap_or(1);
    let kernel: Kernel = match (args.kernel, dim) {
        (KernelChoice::Logsin, 1) => EnergyKernel::log_sin().into(),
        (KernelChoice::Fourier, 1) => EnergyKernel::truncated_fourier(terms)?.into(),
        (KernelChoice::CosineSeries, 1) => {
            let coefs = args
                .coefficients
                .clone()
                .ok_or_else(|| usage("--kernel cosine-series needs --coefficients"))?;
            EnergyKernel::cosine_series(coefs).map_err(|e| usage(e.to_string()))?.into()
        }
        (KernelChoice::Logsin, d) => ProductKernelSpec::log_sin(d)?.into(),
        (KernelChoice::Fourier, d) => ProductKernelSpec::one_plus_fourier(d, terms)?.into(),
        (KernelChoice::CosineSeries, d) => return Err(dynseq::Error::UnsupportedDimension(d).into()),
    };
    if args.exclusion_exponent == 0 {
        return Err(usage("--exclusion-exponent must be positive"));
    }
    let mut config = GreedyConfig::new(kernel)
        .with_engine(args.engine.into())
        .with_fourier_terms(args.fourier_m_rule.rule);
    config.exclusion_exponent = args.exclusion_exponent;
    if let Some(g) = args.grid {
        if g < 2 {
            return Err(usage("--grid must be at least 2"));
        }
        config = config.with_grid(g);
    }
    Ok(config)
}

pub fn generate(args: &GenerateArgs, threads: Option<usize>) -> CliResult<()> {
    let initial = initial_set(&args.initial, args.greedy.dim)?;
    let config = greedy_config(&args.greedy, initial.dim())?;
    if args.count < initial.len() {
        return Err(usage(format!("--count {} is below the initial size {}", args.count, initial.len())));
    }
    let (points, records) = build_sequence(&initial, args.count, &config)?;
    match &args.out {
        Some(path) => io::write_points_file(&points, path)?,
        None => io::write_points(&points, std::io::stdout().lock())
            .map_err(|source| CliError::Output { path: "<stdout>".into(), source })?,
    }
    if let Some(path) = &args.steps {
        io::write_steps(&records, path)?;
    }
    if let Some(out) = &args.out {
        let mut manifest = RunManifest::new(
            "generate",
            threads,
            json!({ "greedy": config, "initial": initial.coords(), "dim": initial.dim(), "count": args.count }),
        );
        manifest.inputs.extend(args.initial.initial_file.clone());
        manifest.outputs.push(out.clone());
        manifest.outputs.extend(args.steps.clone());
        manifest.write_beside(out)?;
    }
    Ok(())
}

pub fn discrepancy(args: &DiscrepancyArgs, threads: Option<usize>) -> CliResult<()> {
    let points = io::read_points(&args.input)?;
    let target = if args.embed_xn {
        xn_embed(&points, points.len())?
    } else {
        points
    };
    let report = star_discrepancy(&target)?;
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    if let Some(out) = &args.out {
        io::write_json(&report, out)?;
        let mut manifest = RunManifest::new("discrepancy", threads, json!({ "embed_xn": args.embed_xn }));
        manifest.inputs.push(args.input.clone());
        manifest.outputs.push(out.clone());
        manifest.write_beside(out)?;
    }
    Ok(())
}

pub fn table(args: &TableArgs, threads: Option<usize>) -> CliResult<()> {
    let origin = IndexOrigin::from_u64(args.index_origin)?;
    let cells = match (args.which, args.columns) {
        (1, Columns::Baselines) => table::baseline_cells(origin)?,
        (1, Columns::Greedy) => table::table1_greedy_cells()?,
        (1, Columns::All) => {
            let mut c = table::table1_greedy_cells()?;
            c.extend(table::baseline_cells(origin)?);
            c
        }
        (2, Columns::Baselines) => return Err(usage("table 2 has no baseline columns")),
        (2, _) => table::table2_cells()?,
        (w, _) => return Err(usage(format!("unknown table {w}"))),
    };
    let rows: Vec<Vec<String>> = cells.iter().map(table::Cell::row).collect();
    io::write_rows_to(&table::HEADER, &rows, args.out.as_deref())?;
    if let Some(out) = &args.out {
        let mut manifest = RunManifest::new(
            "table",
            threads,
            json!({ "which": args.which, "columns": format!("{:?}", args.columns).to_lowercase(), "index_origin": args.index_origin }),
        );
        manifest.outputs.push(out.clone());
        manifest.write_beside(out)?;
    }
    let failed: Vec<String> =
        cells.iter().filter(|c| !c.passed()).map(|c| format!("{} N={}", c.column, c.n)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Certificate(format!("cells beyond tolerance: {}", failed.join(", "))))
    }
}

pub fn scan(args: &ScanArgs, threads: Option<usize>) -> CliResult<()> {
    if args.max_n < 2 {
        return Err(usage("--max-n must be at least 2"));
    }
    if args.stride == 0 {
        return Err(usage("--stride must be positive"));
    }
    let initial = initial_set(&args.initial, args.greedy.dim)?;
    if args.max_n <= initial.len() {
        return Err(usage(format!("--max-n must exceed the initial size {}", initial.len())));
    }
    let config = greedy_config(&args.greedy, initial.dim())?;
    let (sequence, _) = build_sequence(&initial, args.max_n, &config)?;
    let report = scan_sequence(&sequence, args.stride, args.max_n)?;
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.discrepancy.to_string(),
                r.prefix_discrepancy.map(|d| d.to_string()).unwrap_or_default(),
                r.log_ratio.to_string(),
                r.sqrt_ratio.to_string(),
            ]
        })
        .collect();
    let header = ["n", "discrepancy", "prefix_discrepancy", "log_ratio", "sqrt_ratio"];
    io::write_rows_to(&header, &rows, args.out.as_deref())?;
    if let Some(plot) = &args.plot_data {
        let pairs: Vec<Vec<String>> =
            report.rows.iter().map(|r| vec![r.n.to_string(), r.discrepancy.to_string()]).collect();
        io::write_rows_to(&["n", "discrepancy"], &pairs, Some(plot))?;
    }
    eprintln!("max log ratio {:.6}, max sqrt ratio {:.6}", report.max_log_ratio, report.max_sqrt_ratio);
    if let Some(out) = &args.out {
        let mut manifest = RunManifest::new(
            "scan",
            threads,
            json!({
                "greedy": config,
                "initial": initial.coords(),
                "dim": initial.dim(),
                "max_n": args.max_n,
                "stride": args.stride,
                "max_log_ratio": report.max_log_ratio,
                "max_sqrt_ratio": report.max_sqrt_ratio,
            }),
        );
        manifest.inputs.extend(args.initial.initial_file.clone());
        manifest.outputs.push(out.clone());
        manifest.outputs.extend(args.plot_data.clone());
        manifest.write_beside(out)?;
    }
    Ok(())
}

pub fn check(args: &CheckArgs, threads: Option<usize>) -> CliResult<()> {
    if !(args.lemma3 || args.theorem3 || args.dyadic || args.min_energy) {
        return Err(usage("select at least one of --lemma3, --theorem3, --dyadic, --min-energy"));
    }
    if args.steps.is_none() && args.points.is_none() {
        return Err(usage("one of --steps or --points is required"));
    }
    let points = args.points.as_deref().map(io::read_points).transpose()?;
    let steps = args.steps.as_deref().map(io::read_steps).transpose()?;
    let mut report = serde_json::Map::new();
    let mut failures = Vec::new();

    if args.lemma3 {
        let value = match (&points, &steps) {
            (Some(p), _) => lemma3_from_points(p, args)?,
            (None, Some(s)) => lemma3_from_steps(s, args)?,
            (None, None) => unreachable!("checked above"),
        };
        if !value["passed"].as_bool().unwrap_or(false) {
            failures.push(format!("lemma3 at steps {}", value["violations"]));
        }
        report.insert("lemma3".into(), value);
    }
    if args.theorem3 {
        let value = theorem3_values(points.as_ref(), steps.as_deref())?;
        if !value["passed"].as_bool().unwrap_or(false) {
            failures.push(format!("theorem3 at steps {}", value["violations"]));
        }
        report.insert("theorem3".into(), value);
    }
    if args.dyadic {
        let p = points.as_ref().ok_or_else(|| usage("--dyadic needs --points"))?;
        let passed = dyadic_block_check(p, args.depth, args.tol)?;
        if !passed {
            failures.push(format!("dyadic blocks at depth {}", args.depth));
        }
        report.insert("dyadic".into(), json!({ "depth": args.depth, "tol": args.tol, "passed": passed }));
    }
    if args.min_energy {
        let p = points.as_ref().ok_or_else(|| usage("--min-energy needs --points"))?;
        let next = p.len() + 1;
        let radius = (next as f64).powi(-10).max(1e-15);
        let (x, value) = min_energy_report(p, radius)?;
        let margin = -1.0 / (p.len() as f64).powi(2);
        report.insert(
            "min_energy".into(),
            json!({ "x": x, "value": value, "radius": radius, "margin": margin, "below_margin": value <= margin }),
        );
    }
    report.insert("passed".into(), json!(failures.is_empty()));
    let report = serde_json::Value::Object(report);
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    if let Some(out) = &args.out {
        io::write_json(&report, out)?;
        let mut manifest = RunManifest::new(
            "check",
            threads,
            json!({
                "lemma3": args.lemma3, "m_mult": args.m_mult, "from_step": args.from_step, "gate": args.gate,
                "theorem3": args.theorem3, "dyadic": args.dyadic, "depth": args.depth, "tol": args.tol,
                "min_energy": args.min_energy,
            }),
        );
        manifest.inputs.extend(args.points.clone());
        manifest.inputs.extend(args.steps.clone());
        manifest.outputs.push(out.clone());
        manifest.write_beside(out)?;
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Certificate(format!("failed: {}", failures.join("; "))))
    }
}

fn lemma3_from_points(points: &PointSet, args: &CheckArgs) -> CliResult<serde_json::Value> {
    let sums = lemma3_sweep(points, args.from_step, args.m_mult)?;
    let violations: Vec<usize> = sums.iter().filter(|(_, s)| *s > args.gate).map(|(n, _)| *n).collect();
    let worst = sums.iter().map(|(_, s)| *s).fold(f64::NEG_INFINITY, f64::max);
    Ok(json!({
        "source": "points",
        "multiplier": args.m_mult,
        "from_step": args.from_step,
        "gate": args.gate,
        "checked": sums.len(),
        "worst": finite_or_null(worst),
        "violations": violations,
        "passed": violations.is_empty(),
    }))
}

fn lemma3_from_steps(steps: &[StepRecord], args: &CheckArgs) -> CliResult<serde_json::Value> {
    if steps.iter().any(|r| r.lemma3.iter().all(|v| v.multiplier != args.m_mult)) {
        return Err(usage(format!("steps file has no certificate values for multiplier {}; pass --points", args.m_mult)));
    }
    let s = Lemma3Summary::from_records(steps, args.m_mult, args.from_step, args.gate);
    Ok(json!({
        "source": "steps",
        "multiplier": s.multiplier,
        "from_step": args.from_step,
        "gate": args.gate,
        "checked": s.checked,
        "worst": finite_or_null(s.worst),
        "violations": s.violations,
        "passed": s.passed(),
    }))
}

/// Hard gate: the value does not exceed the number of earlier points.
fn theorem3_values(points: Option<&PointSet>, steps: Option<&[StepRecord]>) -> CliResult<serde_json::Value> {
    let values: Vec<(usize, f64)> = match (steps, points) {
        (Some(s), _) => s
            .iter()
            .map(|r| {
                r.theorem3
                    .map(|v| (r.index, v))
                    .ok_or_else(|| usage(format!("step {} has no product condition value", r.index)))
            })
            .collect::<CliResult<_>>()?,
        (None, Some(p)) => {
            if p.dim() < 2 {
                return Err(dynseq::Error::UnsupportedDimension(p.dim()).into());
            }
            (2..=p.len())
                .map(|n| Ok((n, theorem3_condition(&p.prefix(n - 1)?, p.point(n - 1), n)?.value)))
                .collect::<dynseq::Result<_>>()?
        }
        (None, None) => unreachable!("checked by caller"),
    };
    let violations: Vec<usize> =
        values.iter().filter(|(n, v)| *v > (*n - 1) as f64).map(|(n, _)| *n).collect();
    let within_unit = values.iter().filter(|(_, v)| *v <= 1.0).count();
    Ok(json!({
        "steps": values.len(),
        "within_unit": within_unit,
        "within_unit_fraction": if values.is_empty() { 0.0 } else { within_unit as f64 / values.len() as f64 },
        "max_value": finite_or_null(values.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max)),
        "violations": violations,
        "passed": violations.is_empty(),
    }))
}

fn finite_or_null(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        serde_json::Value::Null
    }
}

