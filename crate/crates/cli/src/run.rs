use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use kpartite_core::collective::{verify_prop31, CrossTermCheck};
use kpartite_core::criteria::{depth_certificate, evaluate_criterion, CriterionKind};
use kpartite_core::linalg::{num_sites_for, DensityMatrix};
use kpartite_core::mum::{
    build_mum_set, check_sum_squares, default_mum, mum_from_kappa, t_of_kappa, MumDocument, MumParameters, MumSet,
    MUM_TOL,
};
use kpartite_core::network::network_depth_demo;
use kpartite_core::states::{isotropic_mixture, PureState, StateFamily, StateSpec};
use kpartite_core::tables::{reproduce_table_with_tol, TableComparison, TableId, CSV_HEADER};
use kpartite_core::threshold::{threshold_solve, ThresholdStatus};
use kpartite_core::{Error, Result, SParameter};

use crate::args::{Command, MumAction, MumArgs, StateArgs};
use crate::report::{Parameters, Report};

pub fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::Bounds { num_sites, mum, criterion, k, all_k } => {
            bounds(*num_sites, mum, (*criterion).into(), if *all_k { None } else { *k })
        }
        Command::Mum { action: MumAction::Validate { mum, effects } } => mum_validate(mum, *effects),
        Command::Detect { state, s, k, criterion, mum } => detect(state, s.s, *k, (*criterion).into(), mum),
        Command::Depth { state, s, mum } => depth(state, s.s, mum),
        Command::Threshold { state, s, criterion, k, tol, mum } => {
            threshold(state, s.s, (*criterion).into(), *k, *tol, mum)
        }
        Command::Tables { which, kappa, tol } => tables(which, *kappa, *tol),
        Command::NetworkDemo { s } => network(s.s),
    }
}

fn select_mum(args: &MumArgs) -> Result<MumSet> {
    match (args.kappa, args.t) {
        (Some(kappa), _) => mum_from_kappa(args.d, kappa),
        (None, Some(t)) => build_mum_set(args.d, t),
        (None, None) => default_mum(args.d),
    }
}

fn load_state(spec: &str) -> Result<PureState> {
    match spec.parse::<StateSpec>() {
        Ok(parsed) => parsed.build(),
        Err(parse_err) => {
            let path = Path::new(spec);
            if !path.is_file() {
                return Err(parse_err);
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidStateSpec(format!("{}: {e}", path.display())))?;
            PureState::from_json(&text)
        }
    }
}

fn load_family(spec: &str) -> Result<StateFamily> {
    Ok(StateFamily::new(load_state(spec)?, spec))
}

fn noisy_state(args: &StateArgs) -> Result<(DensityMatrix, StateFamily)> {
    let family = load_family(&args.state)?;
    let rho = isotropic_mixture(&family, args.noise)?;
    Ok((rho, family))
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

#[derive(Serialize)]
struct BoundRow {
    k: usize,
    bound: f64,
}

#[derive(Serialize)]
struct BoundTable {
    criterion_kind: CriterionKind,
    rows: Vec<BoundRow>,
}

fn bounds(num_sites: usize, args: &MumArgs, kind: CriterionKind, k: Option<usize>) -> Result<Report> {
    let mum = match (args.kappa, args.t) {
        // A κ alone fully determines the bound; skip building effects.
        (Some(kappa), _) => MumParameters { d: args.d, t: t_of_kappa(args.d, kappa)?, kappa },
        _ => select_mum(args)?.parameters(),
    };
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (kind.min_k()..=num_sites).collect(),
    };
    let rows = ks
        .into_iter()
        .map(|k| Ok(BoundRow { k, bound: kind.bound(num_sites, mum.d, mum.kappa, k)? }))
        .collect::<Result<Vec<_>>>()?;

    let mut text = format!("{kind} bounds, N = {num_sites}, d = {}, kappa = {}\n", mum.d, mum.kappa);
    for row in &rows {
        let _ = writeln!(text, "k = {:>2}  {}", row.k, row.bound);
    }
    let mut csv = String::from("k,bound\n");
    for row in &rows {
        csv.push_str(&csv_line(&[row.k.to_string(), row.bound.to_string()]));
    }
    let result = BoundTable { criterion_kind: kind, rows };
    Ok(Report::new("bounds", Parameters::from_mum(mum).sites(num_sites), &result, text, csv))
}

#[derive(Serialize)]
struct MumValidation {
    completeness_residual: f64,
    f_sum_residual: f64,
    trace_condition_residual: f64,
    sum_squares_residual: f64,
    min_effect_eigenvalue: f64,
    cross_term: CrossTermCheck,
    tolerance: f64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    effects: Option<MumDocument>,
}

fn mum_validate(args: &MumArgs, with_effects: bool) -> Result<Report> {
    let mum = select_mum(args)?;
    let cross_term = verify_prop31(&mum)?;
    let mut v = MumValidation {
        completeness_residual: mum.completeness_residual(),
        f_sum_residual: mum.f_sum_residual(),
        trace_condition_residual: mum.trace_condition_residual(),
        sum_squares_residual: check_sum_squares(&mum),
        min_effect_eigenvalue: mum.min_effect_eigenvalue()?,
        cross_term,
        tolerance: MUM_TOL,
        passed: false,
        effects: with_effects.then(|| mum.to_document()),
    };
    let checks = [
        ("completeness", v.completeness_residual),
        ("sum of F", v.f_sum_residual),
        ("trace conditions", v.trace_condition_residual),
        ("sum of squares", v.sum_squares_residual),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, r)| r.is_nan() || *r > MUM_TOL).map(|(name, _)| *name).collect();
    v.passed = failed.is_empty() && cross_term.holds() && v.min_effect_eigenvalue >= -MUM_TOL;

    let p = mum.parameters();
    let mut text = format!("MUM d = {}, t = {}, kappa = {}\n", p.d, p.t, p.kappa);
    for (name, r) in checks {
        let _ = writeln!(text, "{name:<18} residual {r:.3e}");
    }
    let _ = writeln!(text, "{:<18} {:.6e}", "min eigenvalue", v.min_effect_eigenvalue);
    let _ = writeln!(
        text,
        "{:<18} lambda_max {:.12} <= 1 + kappa = {:.12}: {}",
        "cross term",
        cross_term.max_eigenvalue,
        cross_term.bound,
        if cross_term.holds() { "ok" } else { "FAILED" }
    );
    let _ = writeln!(text, "{}", if v.passed { "valid" } else { "INVALID" });
    let mut csv = String::from("check,value\n");
    for (name, r) in checks {
        csv.push_str(&csv_line(&[name.to_owned(), r.to_string()]));
    }
    csv.push_str(&csv_line(&["min eigenvalue".into(), v.min_effect_eigenvalue.to_string()]));
    csv.push_str(&csv_line(&["cross term max eigenvalue".into(), cross_term.max_eigenvalue.to_string()]));

    let passed = v.passed;
    let report = Report::new("mum validate", Parameters::from_mum(p), &v, text, csv);
    Ok(if passed { report } else { report.failed(format!("MUM checks failed: {failed:?}")) })
}

fn detect(args: &StateArgs, s: SParameter, k: usize, kind: CriterionKind, mum: &MumArgs) -> Result<Report> {
    let mum = select_mum(mum)?;
    let (rho, family) = noisy_state(args)?;
    let report = evaluate_criterion(&rho, &mum, s, k, kind)?;
    let text = format!(
        "{} (N = {}, p = {}): {kind} k = {k}, s = {s}\nlhs = {}\nbound = {}\nverdict: {}{}\n",
        family.description(),
        report.num_sites,
        args.noise,
        report.lhs,
        report.bound,
        report.verdict,
        report.conclusion.as_deref().map(|c| format!(" ({c})")).unwrap_or_default(),
    );
    let csv = format!(
        "criterion,N,d,kappa,t,s,k,lhs,bound,verdict\n{}",
        csv_line(&[
            kind.to_string(),
            report.num_sites.to_string(),
            report.d.to_string(),
            report.kappa.to_string(),
            report.t.to_string(),
            s.to_string(),
            k.to_string(),
            report.lhs.to_string(),
            report.bound.to_string(),
            report.verdict.to_string(),
        ])
    );
    let params = Parameters::from_mum(mum.parameters()).sites(report.num_sites).s(s);
    Ok(Report::new("detect", params, &report, text, csv))
}

fn depth(args: &StateArgs, s: SParameter, mum: &MumArgs) -> Result<Report> {
    let mum = select_mum(mum)?;
    let (rho, family) = noisy_state(args)?;
    let num_sites = num_sites_for(rho.dim(), mum.dim())?;
    let cert = depth_certificate(&rho, &mum, s)?;
    let mut text = format!("{} (N = {num_sites}, p = {}), s = {s}: lhs = {}\n", family.description(), args.noise, cert.lhs);
    for step in &cert.steps {
        let _ = writeln!(
            text,
            "k = {:>2}  bound {:<10}  {}",
            step.k,
            step.bound,
            if step.violated { "violated: not k-producible" } else { "holds" }
        );
    }
    if cert.depth > 1 {
        let _ = writeln!(text, "certified depth: {} (contains {}-partite entanglement)", cert.depth, cert.depth);
    } else {
        let _ = writeln!(text, "certified depth: 1 (no multipartite entanglement detected)");
    }
    let mut csv = String::from("k,bound,violated\n");
    for step in &cert.steps {
        csv.push_str(&csv_line(&[step.k.to_string(), step.bound.to_string(), step.violated.to_string()]));
    }
    let params = Parameters::from_mum(mum.parameters()).sites(num_sites).s(s);
    Ok(Report::new("depth", params, &cert, text, csv))
}

fn threshold(
    spec: &str,
    s: SParameter,
    kind: CriterionKind,
    k: usize,
    tol: f64,
    mum: &MumArgs,
) -> Result<Report> {
    let mum = select_mum(mum)?;
    let family = load_family(spec)?;
    let num_sites = num_sites_for(family.total_dim(), mum.dim())?;
    let r = threshold_solve(&family, &mum, s, kind, k, tol)?;
    let status = match r.status {
        ThresholdStatus::Solved { p_star } => format!("p* = {p_star}"),
        ThresholdStatus::NotDetectable => "not detectable for any p".to_owned(),
        ThresholdStatus::AlwaysViolated => "violated at p = 0".to_owned(),
    };
    let text = format!(
        "{} {kind} k = {k}, s = {s}, kappa = {}\nbound = {}\n{status}\niterations = {}, residual = {:.3e}\n",
        r.family, r.kappa, r.bound, r.iterations, r.residual
    );
    let csv = format!(
        "family,criterion,k,s,bound,p_star\n{}",
        csv_line(&[
            r.family.clone(),
            kind.to_string(),
            k.to_string(),
            s.to_string(),
            r.bound.to_string(),
            r.status.p_star().map(|p| p.to_string()).unwrap_or_else(|| "NA".into()),
        ])
    );
    let params = Parameters::from_mum(mum.parameters()).sites(num_sites).s(s);
    let report = Report::new("threshold", params, &r, text, csv);
    Ok(match r.status {
        ThresholdStatus::AlwaysViolated => report.failed("the maximally mixed state violates the bound"),
        _ => report,
    })
}

fn tables(which: &str, kappa: f64, tol: f64) -> Result<Report> {
    let ids: Vec<TableId> = if which.eq_ignore_ascii_case("all") {
        TableId::ALL.to_vec()
    } else {
        vec![which.parse()?]
    };
    let reports: Vec<TableComparison> =
        ids.iter().map(|&id| reproduce_table_with_tol(id, kappa, tol)).collect::<Result<_>>()?;
    let text = reports.iter().map(TableComparison::to_text).collect::<Vec<_>>().join("\n");
    let mut csv = format!("{CSV_HEADER}\n");
    for r in &reports {
        csv.push_str(&r.csv_rows());
    }
    let params = Parameters::from_mum(MumParameters { d: 2, t: t_of_kappa(2, kappa)?, kappa });
    Ok(Report::new("tables", params, &reports, text, csv))
}

fn network(s: SParameter) -> Result<Report> {
    let r = network_depth_demo(s)?;
    let mut csv = String::from("state,lhs,certified_depth,network\n");
    for f in &r.findings {
        csv.push_str(&csv_line(&[
            f.label.to_string(),
            f.lhs.to_string(),
            f.certified_depth.to_string(),
            f.network.clone(),
        ]));
    }
    let params = Parameters::from_mum(MumParameters { d: 2, t: t_of_kappa(2, r.kappa)?, kappa: r.kappa }).sites(6).s(s);
    Ok(Report::new("network-demo", params, &r, r.to_text(), csv))
}
