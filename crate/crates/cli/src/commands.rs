use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use bogo_gas::bogoliubov::BogoliubovModel;
use bogo_gas::bound::{
    corollary_condensed, corollary_noncondensed, theorem_bound, BoundForm, BoundOptions, FreeEnergyReport, Interaction,
};
use bogo_gas::condensate::{
    bec_model, classify_regime, condensed_expansion, fluctuation_identity_check, fluctuation_term,
    noncondensed_expansion,
};
use bogo_gas::ideal_gas::{f0_bec, f0_plus_with_tail, f0_total, solve_kappa, solve_mu0, IdealGasState};
use bogo_gas::scattering::{energy_f_ell, scattering_length_scaled, solve_zero_energy, PotentialSpec};
use bogo_gas::verify::{self, Suite};

use crate::args::*;
use crate::error::CliError;
use crate::output::{fmt_f64, to_csv, SCHEMA_VERSION};

type Result<T> = std::result::Result<T, CliError>;

/// What a command produced: a JSON tree, or a table for sweeps and suites.
pub enum Report {
    Tree(Value),
    Table {
        header: Vec<&'static str>,
        rows: Vec<Vec<Cell>>,
        tree: Value,
    },
}

pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => fmt_f64(*x),
            Cell::Num(_) | Cell::Empty => String::new(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        match (self, format) {
            (Report::Tree(v), Format::Json) | (Report::Table { tree: v, .. }, Format::Json) => {
                Ok(crate::output::to_json(v))
            }
            (Report::Tree(v), Format::Csv) => Ok(crate::output::key_value_csv(v)?),
            (Report::Table { header, rows, .. }, Format::Csv) => {
                let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
                Ok(to_csv(header, &rows)?)
            }
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn envelope(command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn potential(p: &PotentialArgs) -> Result<Option<PotentialSpec>> {
    if let Some(r) = p.hard_core {
        return Ok(Some(PotentialSpec::HardCore { radius: r }));
    }
    if let Some(s) = &p.square_barrier {
        return Ok(Some(s.clone()));
    }
    if let Some(path) = &p.potential_file {
        return Ok(Some(PotentialSpec::from_file(path)?));
    }
    Ok(None)
}

fn interaction(l: &LengthArgs) -> Result<Interaction> {
    if let Some(a) = l.a {
        return Ok(Interaction::ScatteringLength(a));
    }
    potential(&l.potential)?.map(Interaction::Potential).ok_or_else(|| {
        CliError::Usage("one of --a, --hard-core, --square-barrier, --potential-file is required".into())
    })
}

fn state(s: &StateArgs) -> Result<IdealGasState> {
    Ok(match (s.kappa, s.beta) {
        (Some(k), _) => solve_kappa(k, s.n)?,
        (None, Some(b)) => solve_mu0(b, s.n)?,
        (None, None) => return Err(CliError::Usage("one of --kappa, --beta is required".into())),
    })
}

fn formulas(pairs: &[(&str, &str)]) -> Value {
    Value::Object(pairs.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

pub fn scatter(args: &ScatterArgs) -> Result<Report> {
    let pot = potential(&args.potential)?
        .ok_or_else(|| CliError::Usage("one of --hard-core, --square-barrier, --potential-file is required".into()))?;
    let sol = solve_zero_energy(&pot)?;
    let mut body = json!({
        "potential": to_value(&pot),
        "scattering_length": sol.scattering_length,
        "support_radius": sol.support_radius,
        "affine_mismatch": sol.affine_mismatch,
    });
    if let Some(n) = args.n {
        let a_n = scattering_length_scaled(sol.scattering_length, n);
        let ell = n.powf(args.ell_exponent);
        let scaled = solve_zero_energy(&pot.scaled(n))?;
        let f_ell = scaled.f_ell(ell)?;
        body["scaled"] = json!({
            "n": n,
            "a_n": a_n,
            "ell": ell,
            "energy_f_ell": f_ell.energy()?,
            "energy_closed_form": energy_f_ell(a_n, ell)?,
            "u_integrals": to_value(&f_ell.u_integrals()?),
        });
    }
    body["term_formulas"] = formulas(&[
        ("scattering_length", "lim r(1 − f(r)) for Δf = (V/2)f, f → 1"),
        ("energy_f_ell", "∫_{|x|<ℓ} |∇f_ℓ|² + (V_N/2) f_ℓ², f_ℓ = f/f(ℓ)"),
        ("energy_closed_form", "4π𝔞_N / (1 − 𝔞_N/ℓ)"),
    ]);
    Ok(Report::Tree(envelope("scatter", body)))
}

pub fn ideal(args: &IdealArgs) -> Result<Report> {
    let s = state(&args.state)?;
    let (fp, fp_tail) = f0_plus_with_tail(&s)?;
    let body = json!({
        "state": to_value(&s),
        "kappa": s.kappa(),
        "condensate_fraction": s.condensate_fraction(),
        "f0_bec": f0_bec(&s)?,
        "f0_plus": fp,
        "f0_plus_tail": fp_tail,
        "f0_total": f0_total(&s)?,
        "term_formulas": formulas(&[
            ("mu0", "Σ_{p∈Λ*} 1/(e^{β(|p|²−μ₀)} − 1) = N"),
            ("f0_bec", "(1/β) ln(1 − e^{βμ₀}) + μ₀N₀"),
            ("f0_plus", "(1/β) Σ_{p≠0} ln(1 − e^{−β(|p|²−μ₀)}) + μ₀(N − N₀)"),
            ("f0_total", "f0_bec + f0_plus"),
        ]),
    });
    Ok(Report::Tree(envelope("ideal", body)))
}

pub fn bogoliubov(args: &BogoliubovArgs) -> Result<Report> {
    let s = state(&args.state)?;
    let a = interaction(&args.length)?.scattering_length()?;
    let m = BogoliubovModel::from_ideal(&s, a, args.delta_bog)?;
    let check = m.expansion_check()?;
    let body = json!({
        "inputs": {"n": s.n_total, "beta": s.beta, "kappa": s.kappa(), "a": a, "a_n": m.a_n, "delta_bog": m.delta_bog},
        "mu0": s.mu0,
        "n0": s.n0,
        "coupling": m.coupling(),
        "pb_radius": m.pb_radius(),
        "pb_points": m.pb_point_count(),
        "e0_ground": m.e0_ground(),
        "gamma_diag_sum": m.gamma_diag_sum()?,
        "bog_correction": to_value(&m.bog_correction()?),
        "free_energy_direct": to_value(&m.free_energy_direct()?),
        "expansion_check": {
            "lhs": check.lhs,
            "rhs": check.rhs,
            "residual": check.residual,
            "budget_shape": check.budget_shape,
            "ratio": check.ratio(),
            "pb_points": check.pb_points,
        },
        "term_formulas": formulas(&[
            ("coupling", "c = 16π𝔞_N N₀"),
            ("pb_radius", "N^{δ_Bog}"),
            ("e0_ground", "−½ Σ_{P_B} [|p|² − μ₀ + c/2 − ε(p)]"),
            ("bog_correction", "−(1/2β) Σ_{p≠0} [c/|p|² − ln(1 + c/|p|²)]"),
            ("free_energy_direct", "(1/β) Σ_{p≠0} ln(1 − e^{−βε(p)})"),
            ("expansion_check.lhs", "(1/β) Σ_{P_B} ln(1 − e^{−βε(p)})"),
            ("expansion_check.rhs", "(1/β) Σ_{P_B} ln(1 − e^{−β(|p|²−μ₀)}) + (c/2) Σ_{P_B} γ⁰_p + bog_correction"),
            ("expansion_check.budget_shape", "(N₀/N)² (N^δ + 1/(βN^δ) + 1/(β²N₀))"),
        ]),
    });
    Ok(Report::Tree(envelope("bogoliubov", body)))
}

pub fn condensate(args: &CondensateArgs) -> Result<Report> {
    let s = state(&args.state)?;
    let a = interaction(&args.length)?.scattering_length()?;
    let n = s.n_total;
    let n0 = args.n0.unwrap_or(s.n0);
    let a_n = scattering_length_scaled(a, n);
    let model = bec_model(s.beta, n0, a_n)?;
    let fluct = if a_n > 0.0 {
        to_value(&fluctuation_identity_check(s.beta, n0, a_n)?)
    } else {
        Value::Null
    };
    let body = json!({
        "inputs": {"n": n, "beta": s.beta, "kappa": s.kappa(), "a": a, "a_n": a_n, "n0": n0},
        "model": to_value(&model),
        "moments": to_value(&model.moments()?),
        "f_bec": model.free_energy(n0),
        "condensed_expansion": if a_n > 0.0 { json!(condensed_expansion(s.beta, n0, a_n)) } else { Value::Null },
        "fluctuation_term": if a_n > 0.0 { json!(fluctuation_term(s.beta, a_n)) } else { Value::Null },
        "noncondensed_expansion": noncondensed_expansion(s.beta, n0),
        "fluctuation_identity": fluct,
        "regime": to_value(&classify_regime(n0, n, args.regime_eps)?),
        "term_formulas": formulas(&[
            ("model.mu", "⟨|z|²⟩_g = N₀, g ∝ e^{−β(4π𝔞_N|z|⁴ − μ|z|²)}"),
            ("f_bec", "−(1/β) ln ∫ e^{−β(4π𝔞_N|z|⁴ − μ|z|²)} dz + μN₀"),
            ("condensed_expansion", "4π𝔞_N N₀² + (1/2β) ln(4β𝔞_N)"),
            ("noncondensed_expansion", "−(1/β)(ln N₀ + 1)"),
            ("fluctuation_identity.fluctuation_free_energy", "4π𝔞_N Var_g(|z|²) − S(g)/β"),
        ]),
    });
    Ok(Report::Tree(envelope("condensate", body)))
}

fn options(k: &BoundKnobs) -> BoundOptions {
    BoundOptions {
        delta_bog: k.delta_bog,
        ell_exponent: k.ell_exponent,
        regime_eps: k.regime_eps,
    }
}

fn evaluate(n: f64, kappa: f64, i: &Interaction, k: &BoundKnobs) -> bogo_gas::Result<FreeEnergyReport> {
    let o = options(k);
    match k.form {
        Form::Theorem => theorem_bound(n, kappa, i, &o),
        Form::Condensed => corollary_condensed(n, kappa, i, &o),
        Form::Noncondensed => corollary_noncondensed(n, kappa, i, &o),
    }
}

fn bound_formulas(form: BoundForm) -> Value {
    let condensate = match form {
        BoundForm::Theorem => "min(condensate_branch_interacting, condensate_branch_ideal)",
        BoundForm::Condensed => "−4π𝔞_N N₀² + (1/2β) ln(4β𝔞_N)",
        BoundForm::Noncondensed => "condensate_branch_ideal",
    };
    formulas(&[
        ("f0_plus", "(1/β) Σ_{p≠0} ln(1 − e^{−β(|p|²−μ₀)}) + μ₀(N − N₀)"),
        ("density_density", "8π𝔞_N N²"),
        ("condensate", condensate),
        ("condensate_branch_interacting", "f_bec − 8π𝔞_N N₀²"),
        ("condensate_branch_ideal", "(1/β) ln(1 − e^{βμ₀}) + μ₀N₀"),
        ("f_bec", "−(1/β) ln ∫ e^{−β(4π𝔞_N|z|⁴ − μ|z|²)} dz + μN₀"),
        (
            "bog_correction",
            "−(1/2β) Σ_{p≠0} [c/|p|² − ln(1 + c/|p|²)], c = 16π𝔞_N N₀",
        ),
        ("total", "f0_plus + density_density + condensate + bog_correction"),
        ("error_scale", "remainder O(N^{11/18}) with unknown constant"),
    ])
}

fn bound_tree(r: &FreeEnergyReport) -> Value {
    let mut v = to_value(r);
    v["tail_flags"] = json!(r.tail_flags());
    v["term_formulas"] = bound_formulas(r.form);
    v
}

pub fn bound(args: &BoundArgs) -> Result<Report> {
    let i = interaction(&args.length)?;
    let r = evaluate(args.n, args.kappa, &i, &args.knobs)?;
    Ok(Report::Tree(envelope("bound", bound_tree(&r))))
}

pub const SWEEP_COLUMNS: [&str; 14] = [
    "N",
    "kappa",
    "a",
    "N0",
    "mu0",
    "f0_plus",
    "density_density",
    "f_bec",
    "f0_bec",
    "bog_correction",
    "selected_branch",
    "total",
    "tail_flags",
    "error",
];

fn sweep_row(n: f64, kappa: f64, a: Option<f64>, r: &bogo_gas::Result<FreeEnergyReport>) -> Vec<Cell> {
    match r {
        Ok(r) => vec![
            Cell::Num(n),
            Cell::Num(kappa),
            Cell::Num(r.inputs.a),
            Cell::Num(r.diagnostics.n0),
            Cell::Num(r.diagnostics.mu0),
            Cell::Num(r.terms.f0_plus),
            Cell::Num(r.terms.density_density),
            Cell::opt(r.terms.f_bec),
            Cell::opt(r.terms.condensate_branch_ideal),
            Cell::opt(r.terms.bog_correction),
            r.terms
                .selected_branch
                .map_or(Cell::Empty, |b| Cell::Text(b.as_str().into())),
            Cell::Num(r.total),
            Cell::Text(r.tail_flags().join(";")),
            Cell::Empty,
        ],
        Err(e) => {
            let mut row = vec![Cell::Num(n), Cell::Num(kappa), Cell::opt(a)];
            row.extend((3..SWEEP_COLUMNS.len() - 1).map(|_| Cell::Empty));
            row.push(Cell::Text(format!("{}: {e}", e.kind())));
            row
        }
    }
}

fn cell_value(c: &Cell) -> Value {
    match c {
        Cell::Num(x) => json!(x),
        Cell::Text(s) if s.is_empty() => Value::Null,
        Cell::Text(s) => json!(s),
        Cell::Empty => Value::Null,
    }
}

pub fn sweep(args: &SweepArgs) -> Result<Report> {
    let interactions: Vec<(Option<f64>, Interaction)> = match (&args.a, potential(&args.potential)?) {
        (Some(g), _) => {
            g.0.iter()
                .map(|a| (Some(*a), Interaction::ScatteringLength(*a)))
                .collect()
        }
        (None, Some(p)) => vec![(None, Interaction::Potential(p))],
        (None, None) => {
            return Err(CliError::Usage(
                "one of --a, --hard-core, --square-barrier, --potential-file is required".into(),
            ))
        }
    };
    let mut points = Vec::new();
    for &n in &args.n.0 {
        for &kappa in &args.kappa.0 {
            for (a, i) in &interactions {
                points.push((n, kappa, *a, i));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", args.jobs)))?;
    let rows: Vec<Vec<Cell>> = pool.install(|| {
        points
            .par_iter()
            .map(|(n, kappa, a, i)| sweep_row(*n, *kappa, *a, &evaluate(*n, *kappa, i, &args.knobs)))
            .collect()
    });
    let tree = envelope(
        "sweep",
        json!({
            "columns": SWEEP_COLUMNS,
            "rows": rows
                .iter()
                .map(|r| Value::Object(SWEEP_COLUMNS.iter().zip(r).map(|(k, c)| (k.to_string(), cell_value(c))).collect()))
                .collect::<Vec<_>>(),
        }),
    );
    Ok(Report::Table {
        header: SWEEP_COLUMNS.to_vec(),
        rows,
        tree,
    })
}

/// Runs the suites; the second value is the number of failed checks.
pub fn verify_suites(args: &VerifyArgs) -> Result<(Report, usize)> {
    let suites = Suite::parse(&args.suite).map_err(|e| CliError::Usage(e.to_string()))?;
    let checks = verify::run(&suites);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let rows: Vec<Vec<Cell>> = checks
        .iter()
        .map(|c| {
            vec![
                Cell::Text(c.suite.into()),
                Cell::Text(c.name.into()),
                Cell::Num(c.measured),
                Cell::Num(c.limit),
                Cell::Text(c.passed.to_string()),
                c.error.clone().map_or(Cell::Empty, Cell::Text),
            ]
        })
        .collect();
    let tree = envelope(
        "verify",
        json!({
            "suites": suites.iter().map(|s| s.name()).collect::<Vec<_>>(),
            "passed": failed == 0,
            "failed": failed,
            "checks": to_value(&checks),
        }),
    );
    Ok((
        Report::Table {
            header: vec!["suite", "name", "measured", "limit", "passed", "error"],
            rows,
            tree,
        },
        failed,
    ))
}
