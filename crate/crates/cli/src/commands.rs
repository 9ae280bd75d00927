//! Subcommand dispatch.

use std::path::PathBuf;

use ndarray::{Array1, Array2};
use serde_json::{json, Value};
use sparsepath::glm::{GlmProblem, RegressionData, Response, SparsityMode};
use sparsepath::graphical::{recode_path, Coding, GgmModel, IsingModel, PottsModel};
use sparsepath::simulate::{gen_linear_data, gibbs_sample_ising, GridIsingSpec};
use sparsepath::{iss_path, resolve_tlist, run_lb, GroupIndex, IssOptions, PathConfig64, SolutionPath64};

use crate::args::{
    Cli, Command, FamilyArg, GgmArgs, GridArgs, IsingArgs, IssArgs, LbArgs, LinearArgs, OutputArgs,
    PathArgs, PottsArgs, SimulateCommand,
};
use crate::data::{load_csv, Role};
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, write_json, write_matrix, write_path_csv};
use crate::plot::render_path;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_tlist(tlist: &Option<Vec<f64>>) -> CliResult<()> {
    if let Some(tl) = tlist {
        if tl.is_empty() {
            return Err(usage("--tlist must not be empty"));
        }
        if tl.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(usage("--tlist entries must be positive and finite"));
        }
        if tl.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(usage("--tlist must be strictly increasing"));
        }
    }
    Ok(())
}

fn check_grid(nt: usize, trate: f64) -> CliResult<()> {
    if nt == 0 {
        return Err(usage("--nt must be at least 1"));
    }
    if !(trate > 1.0 && trate.is_finite()) {
        return Err(usage(format!("--trate must be finite and greater than 1, got {trate}")));
    }
    Ok(())
}

/// Validates the path flags and turns them into an engine configuration.
pub fn path_config(args: &PathArgs) -> CliResult<PathConfig64> {
    if !(args.kappa > 0.0 && args.kappa.is_finite()) {
        return Err(usage(format!("--kappa must be positive and finite, got {}", args.kappa)));
    }
    check_grid(args.nt, args.trate)?;
    check_tlist(&args.tlist)?;
    let mut config = PathConfig64::new(args.kappa).with_grid(args.nt, args.trate);
    if let Some(a) = args.alpha {
        if !(a > 0.0 && a.is_finite()) {
            return Err(usage(format!("--alpha must be positive and finite, got {a}")));
        }
        config = config.with_alpha(a);
    }
    if let Some(tl) = &args.tlist {
        config = config.with_tlist(tl.clone());
    }
    Ok(config)
}

fn parse_coding(s: &str) -> CliResult<Coding> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        ["0", "1"] | ["1", "0"] => Ok(Coding::ZeroOne),
        ["-1", "1"] | ["1", "-1"] => Ok(Coding::PlusMinusOne),
        _ => Err(usage(format!("--responses must be 0,1 or -1,1, got {s:?}"))),
    }
}

fn pair_names(names: &[String]) -> Vec<String> {
    let p = names.len();
    let mut out = Vec::with_capacity(p * p.saturating_sub(1) / 2);
    for j in 0..p {
        for k in (j + 1)..p {
            out.push(format!("{}--{}", names[j], names[k]));
        }
    }
    out
}

fn group_names(groups: &GroupIndex, theta_names: &[String]) -> Vec<String> {
    groups
        .iter()
        .map(|m| m.iter().map(|&j| theta_names[j].as_str()).collect::<Vec<_>>().join("+"))
        .collect()
}

/// Everything needed to write the artifacts of a fitted path.
struct Fitted<'a> {
    theta0_names: Vec<String>,
    theta_names: Vec<String>,
    times: Vec<f64>,
    theta0: Vec<Array1<f64>>,
    theta: Vec<Array1<f64>>,
    resolved: Value,
    entries: Vec<(String, f64)>,
    output: &'a OutputArgs,
}

fn lb_summary(path: &SolutionPath64, group_names: &[String]) -> (Value, Vec<(String, f64)>) {
    let resolved = json!({
        "kappa": path.kappa,
        "alpha": path.alpha,
        "t0": path.t0,
        "iterations": path.iterations,
        "tlist": path.times,
    });
    let entries = path
        .entry_order()
        .into_iter()
        .map(|g| (group_names[g].clone(), path.entry_times[g].unwrap()))
        .collect();
    (resolved, entries)
}

fn from_lb<'a>(
    path: SolutionPath64,
    theta0_names: Vec<String>,
    theta_names: Vec<String>,
    groups: &GroupIndex,
    output: &'a OutputArgs,
) -> Fitted<'a> {
    let gnames = group_names(groups, &theta_names);
    let (resolved, entries) = lb_summary(&path, &gnames);
    Fitted {
        theta0_names,
        theta_names,
        times: path.times,
        theta0: path.theta0,
        theta: path.theta,
        resolved,
        entries,
        output,
    }
}

fn write_artifacts(cli: &Cli, fitted: Fitted<'_>) -> CliResult<Vec<PathBuf>> {
    let dir = ensure_dir(&fitted.output.out_dir)?;
    let csv = dir.join("path.csv");
    let theta0: Vec<Array1<f64>> = if fitted.theta0_names.is_empty() {
        vec![Array1::zeros(0); fitted.times.len()]
    } else {
        fitted.theta0.clone()
    };
    write_path_csv(
        &csv,
        &fitted.theta0_names,
        &fitted.theta_names,
        &fitted.times,
        &theta0,
        &fitted.theta,
    )?;
    let entry_order: Vec<Value> = fitted
        .entries
        .iter()
        .map(|(name, t)| json!({ "name": name, "t": t }))
        .collect();
    let manifest = json!({
        "manifest": cli,
        "resolved": fitted.resolved,
        "entry_order": entry_order,
    });
    let json_file = dir.join("path.json");
    write_json(&json_file, &manifest)?;
    let mut written = vec![csv, json_file];
    if fitted.output.plot {
        let svg = dir.join("path.svg");
        std::fs::write(&svg, render_path(&fitted.times, &fitted.theta, fitted.output.x_axis)?)?;
        written.push(svg);
    }
    Ok(written)
}

fn run_lb_command(cli: &Cli, a: &LbArgs) -> CliResult<Vec<PathBuf>> {
    let config = path_config(&a.path)?;
    if a.index.is_some() && !a.group {
        return Err(usage("--index requires --group"));
    }
    if a.group && a.index.is_none() && a.family != FamilyArg::Multinomial {
        return Err(usage("--group needs --index for the gaussian and binomial families"));
    }
    let header = a.output.header;
    let xd = load_csv(&a.x, Role::Design, header)?;
    let (response, classes): (Response<f64>, Vec<String>) = match a.family {
        FamilyArg::Gaussian => (
            Response::Gaussian(load_csv(&a.y, Role::Response, header)?.column_vector()),
            Vec::new(),
        ),
        FamilyArg::Binomial => (
            Response::binomial_from(load_csv(&a.y, Role::Response, header)?.column_vector().view())?,
            Vec::new(),
        ),
        FamilyArg::Multinomial => {
            let yd = load_csv(&a.y, Role::CategoricalMatrix, header)?;
            if yd.ncols() != 1 {
                return Err(CliError::Data(format!(
                    "{}: response must have one column, found {}",
                    a.y.display(),
                    yd.ncols()
                )));
            }
            let levels = yd.levels.clone().unwrap().remove(0);
            let labels: Vec<usize> = yd.column_vector().iter().map(|&c| c as usize).collect();
            let (resp, seen) = Response::multinomial_from(&labels);
            let names = seen.into_iter().map(|c| levels[c].clone()).collect();
            (resp, names)
        }
    };
    let mode = match (&a.index, a.group) {
        (Some(ix), _) => {
            let d = load_csv(ix, Role::CategoricalMatrix, false)?;
            let labels: Vec<usize> = if d.nrows() == 1 {
                d.values.row(0).iter().map(|&v| v as usize).collect()
            } else {
                d.values.column(0).iter().map(|&v| v as usize).collect()
            };
            if labels.len() != xd.ncols() {
                return Err(CliError::Data(format!(
                    "{}: {} group labels for {} design columns",
                    ix.display(),
                    labels.len(),
                    xd.ncols()
                )));
            }
            SparsityMode::Block(GroupIndex::from_labels(&labels))
        }
        (None, true) => SparsityMode::Column,
        (None, false) => SparsityMode::Entry,
    };
    let data = RegressionData::new(xd.values.clone(), response)?;
    let problem = GlmProblem::new(data, a.intercept, a.normalize, &mode)?;
    let path = problem.fit(&config)?;
    let (theta0_names, theta_names) = if classes.is_empty() {
        (
            if a.intercept { vec!["intercept".to_string()] } else { Vec::new() },
            xd.names.clone(),
        )
    } else {
        let t0 = if a.intercept {
            classes.iter().map(|c| format!("intercept:{c}")).collect()
        } else {
            Vec::new()
        };
        let th = xd
            .names
            .iter()
            .flat_map(|f| classes.iter().map(move |c| format!("{f}:{c}")))
            .collect();
        (t0, th)
    };
    write_artifacts(cli, from_lb(path, theta0_names, theta_names, &problem.groups, &a.output))
}

fn run_iss_command(cli: &Cli, a: &IssArgs) -> CliResult<Vec<PathBuf>> {
    check_grid(a.nt, a.trate)?;
    check_tlist(&a.tlist)?;
    if let Some(tm) = a.t_max {
        if !(tm > 0.0) {
            return Err(usage(format!("--t-max must be positive, got {tm}")));
        }
    }
    let xd = load_csv(&a.x, Role::Design, a.output.header)?;
    let y = load_csv(&a.y, Role::Response, a.output.header)?.column_vector();
    if y.len() != xd.nrows() {
        return Err(CliError::Data(format!(
            "response has {} rows, design has {}",
            y.len(),
            xd.nrows()
        )));
    }
    let options = IssOptions {
        intercept: a.intercept,
        normalize: a.normalize,
        t_max: a.t_max,
        max_knots: None,
    };
    let path = iss_path(xd.values.view(), y.view(), &options)?;
    let knots = path.knots();
    let tlist = match &a.tlist {
        Some(tl) => tl.clone(),
        None => {
            let t1 = *knots
                .first()
                .ok_or_else(|| CliError::Data("no variable enters the path".into()))?;
            resolve_tlist(t1, &PathConfig64::new(1.0).with_grid(a.nt, a.trate))
        }
    };
    let p = xd.ncols();
    let mut entries = Vec::new();
    for j in 0..p {
        if let Some(s) = path.segments.iter().find(|s| s.theta[j] != 0.0) {
            entries.push((xd.names[j].clone(), s.start));
        }
    }
    entries.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let fitted = Fitted {
        theta0_names: if a.intercept { vec!["intercept".into()] } else { Vec::new() },
        theta_names: xd.names.clone(),
        theta0: tlist.iter().map(|&t| Array1::from_elem(1, path.intercept_at(t))).collect(),
        theta: tlist.iter().map(|&t| path.theta_at(t)).collect(),
        resolved: json!({
            "knots": knots,
            "converged": path.converged,
            "tlist": tlist,
        }),
        times: tlist,
        entries,
        output: &a.output,
    };
    write_artifacts(cli, fitted)
}

fn run_ggm_command(cli: &Cli, a: &GgmArgs) -> CliResult<Vec<PathBuf>> {
    let config = path_config(&a.path)?;
    let header = a.output.header;
    let (model, names) = match (&a.x, &a.covariance) {
        (Some(x), None) => {
            let d = load_csv(x, Role::Design, header)?;
            (GgmModel::from_data(d.values.view())?, d.names)
        }
        (None, Some(s)) => {
            let d = load_csv(s, Role::Covariance, header)?;
            (GgmModel::from_covariance(d.values.clone())?, d.names)
        }
        _ => return Err(usage("give exactly one of a data file or --covariance")),
    };
    let groups = GroupIndex::singletons(sparsepath::graphical::PairIndex::new(names.len()).len());
    let path = run_lb(&model, &groups, &config)?;
    let theta0_names = names.iter().map(|n| format!("diag:{n}")).collect();
    let fitted = from_lb(path, theta0_names, pair_names(&names), &groups, &a.output);
    write_artifacts(cli, fitted)
}

fn run_ising_command(cli: &Cli, a: &IsingArgs) -> CliResult<Vec<PathBuf>> {
    let config = path_config(&a.path)?;
    let coding = parse_coding(&a.responses)?;
    let d = load_csv(&a.x, Role::BinaryMatrix, a.output.header)?;
    let model = IsingModel::new(d.values.view(), coding, a.intercept)?;
    let groups = GroupIndex::singletons(model.pairs().len());
    let path = run_lb(&model, &groups, &config)?;
    let p = d.ncols();
    let mut path = recode_path(&path, p, coding);
    let prefix = match coding {
        Coding::ZeroOne => "theta0",
        Coding::PlusMinusOne => "h",
    };
    let theta0_names = if a.intercept || coding == Coding::PlusMinusOne {
        d.names.iter().map(|n| format!("{prefix}:{n}")).collect()
    } else {
        Vec::new()
    };
    if !a.intercept && coding == Coding::ZeroOne {
        path.theta0.iter_mut().for_each(|v| *v = Array1::zeros(0));
    }
    let fitted = from_lb(path, theta0_names, pair_names(&d.names), &groups, &a.output);
    write_artifacts(cli, fitted)
}

fn run_potts_command(cli: &Cli, a: &PottsArgs) -> CliResult<Vec<PathBuf>> {
    let config = path_config(&a.path)?;
    let d = load_csv(&a.x, Role::CategoricalMatrix, a.output.header)?;
    let levels = d.levels.clone().unwrap();
    let model = PottsModel::new(d.codes().view(), a.intercept, a.group)?;
    let groups = model.groups();
    let path = run_lb(&model, &groups, &config)?;
    let layout = model.layout();
    let level_name = |j: usize, s: usize| {
        let code = layout.classes(j)[s] as usize;
        format!("{}={}", d.names[j], levels[j][code])
    };
    let theta0_names = if a.intercept {
        (0..layout.p())
            .flat_map(|j| (0..layout.levels(j)).map(move |s| (j, s)))
            .map(|(j, s)| level_name(j, s))
            .collect()
    } else {
        Vec::new()
    };
    let mut theta_names = Vec::with_capacity(layout.n_interactions());
    for (j, k) in layout.pairs().iter() {
        for s in 0..layout.levels(j) {
            for t in 0..layout.levels(k) {
                theta_names.push(format!("{}--{}", level_name(j, s), level_name(k, t)));
            }
        }
    }
    let mut fitted = from_lb(path, theta0_names, theta_names, &groups, &a.output);
    if a.group {
        let names = pair_names(&d.names);
        for e in fitted.entries.iter_mut() {
            let g = group_names(&groups, &fitted.theta_names)
                .iter()
                .position(|n| *n == e.0)
                .unwrap();
            e.0 = names[g].clone();
        }
    }
    write_artifacts(cli, fitted)
}

fn run_grid(a: &GridArgs) -> CliResult<Vec<PathBuf>> {
    let coding = parse_coding(&a.responses)?;
    if a.rows == 0 || a.cols == 0 {
        return Err(usage("--rows and --cols must be positive"));
    }
    if a.n == 0 {
        return Err(usage("--n must be positive"));
    }
    if a.thinning == 0 {
        return Err(usage("--thinning must be positive"));
    }
    if !a.coupling.is_finite() || !a.field.is_finite() {
        return Err(usage("--coupling and --field must be finite"));
    }
    let spec = GridIsingSpec {
        rows: a.rows,
        cols: a.cols,
        coupling: a.coupling,
        field: vec![a.field; a.rows * a.cols],
        n_samples: a.n,
        burn_in: a.burn_in,
        thinning: a.thinning,
        seed: a.seed,
    };
    let x: Array2<f64> = gibbs_sample_ising(&spec, coding)?;
    let dir = ensure_dir(&a.out_dir)?;
    let xf = dir.join("X.csv");
    write_matrix(&xf, x.view())?;
    let ef = dir.join("edges.csv");
    let edges = spec.edges();
    let em = Array2::from_shape_fn((edges.len(), 2), |(i, c)| {
        (if c == 0 { edges[i].0 } else { edges[i].1 }) as f64
    });
    write_matrix(&ef, em.view())?;
    Ok(vec![xf, ef])
}

fn run_linear(a: &LinearArgs) -> CliResult<Vec<PathBuf>> {
    if a.sparsity > a.p {
        return Err(usage(format!("--sparsity {} exceeds --p {}", a.sparsity, a.p)));
    }
    if !(a.snr > 0.0) {
        return Err(usage(format!("--snr must be positive, got {}", a.snr)));
    }
    let inst = gen_linear_data::<f64>(a.n, a.p, a.sparsity, a.snr, a.seed)?;
    let dir = ensure_dir(&a.out_dir)?;
    let files = [dir.join("X.csv"), dir.join("y.csv"), dir.join("theta.csv")];
    write_matrix(&files[0], inst.x.view())?;
    write_matrix(&files[1], inst.y.view().insert_axis(ndarray::Axis(1)))?;
    write_matrix(&files[2], inst.theta.view().insert_axis(ndarray::Axis(1)))?;
    Ok(files.to_vec())
}

/// Executes a parsed command line and returns the files written.
pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    match &cli.command {
        Command::Lb(a) => run_lb_command(cli, a),
        Command::Iss(a) => run_iss_command(cli, a),
        Command::Ggm(a) => run_ggm_command(cli, a),
        Command::Ising(a) => run_ising_command(cli, a),
        Command::Potts(a) => run_potts_command(cli, a),
        Command::Simulate(SimulateCommand::Grid(a)) => run_grid(a),
        Command::Simulate(SimulateCommand::Linear(a)) => run_linear(a),
    }
}
