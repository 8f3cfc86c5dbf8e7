//! The four physical case studies. Each report lists the derived parameters,
//! the cases the detector finds, and the closed-form claims of the case
//! checked numerically against the Heun series of the (possibly perturbed)
//! parameters.

use clap::{Args, Subcommand};
use heun_core::numerics::{heun_series, Jet};
use heun_core::physics::charged::{
    charged_particle_harmonic_form, charged_particle_params, charged_particle_quadrature, charged_particle_trivial_energy,
    ChargedParticleInput, RootOrder,
};
use heun_core::physics::coulomb::{
    coulomb_ground_state_form, coulomb_legendre_case, coulomb_params, coulomb_quartic_matching, coulomb_reduc_energy,
    coulomb_spectrum, trivial_energy, CoulombSphereInput,
};
use heun_core::physics::inverse_square::{inverse_square_feasibility, inverse_square_half_form, inverse_square_params, InverseSquareInput};
use heun_core::physics::quantum_walk::{quantum_walk_density_jet, quantum_walk_params, QuantumWalkInput};
use heun_core::reduction::{reduce_cubic_d4, reduce_harmonic_d_minus1};
use heun_core::scalar::{approx_zero, c64, fmt_c64, real, serde_c64, C64, TOL_CONDITION};
use heun_core::verification::{compare, verify_reduction, verify_solution, FnEvaluator};
use heun_core::{catalog_pairs, detect_cases, Error, GridSpec, HeunParams, HypergeometricForm, ReductionReport, VerificationReport};
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{default_grid, emit, params_line, summary};
use crate::input::parse_complex;
use crate::{CliError, Config, Verdict};

#[derive(Subcommand, Debug)]
pub enum CaseCommand {
    /// Coulomb problem on the 3-sphere (d = -1)
    #[command(name = "coulomb3sphere")]
    Coulomb(CoulombArgs),
    /// Inverse-square potential with a deformed commutator
    #[command(name = "inverse-square")]
    InverseSquare(InverseSquareArgs),
    /// Limit density of the discrete-time quantum walk (d = 4 by default)
    #[command(name = "quantum-walk")]
    QuantumWalk(QuantumWalkArgs),
    /// Charged particle on a sphere with a monopole field
    #[command(name = "charged-particle")]
    ChargedParticle(ChargedArgs),
}

#[derive(Args, Debug)]
pub struct Perturb {
    /// Add this amount to q before verifying, to watch the claims fail
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb_q: f64,
}

fn complex_arg(s: &str) -> Result<C64, String> {
    parse_complex(s)
}

#[derive(Args, Debug)]
pub struct CoulombArgs {
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub gamma: C64,
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    pub beta: C64,
    /// Defaults to the ground-state energy m(m+2) - γ²/(4(1+m)²)
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    pub energy: Option<C64>,
    #[command(flatten)]
    pub perturb: Perturb,
}

#[derive(Args, Debug)]
pub struct InverseSquareArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.5)]
    pub omega4: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[command(flatten)]
    pub perturb: Perturb,
}

#[derive(Args, Debug)]
pub struct QuantumWalkArgs {
    #[arg(long, default_value_t = 4.0)]
    pub d: f64,
    #[command(flatten)]
    pub perturb: Perturb,
}

#[derive(Args, Debug)]
pub struct ChargedArgs {
    /// Monopole strength S
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub s: f64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub m: i32,
    /// Sphere radius R
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Bohr radius; "inf" switches the Coulomb repulsion off
    #[arg(long, default_value_t = f64::INFINITY)]
    pub l0: f64,
    /// Energy ε'; defaults to the value at which ab = 0
    #[arg(long, allow_hyphen_values = true)]
    pub eps_prime: Option<f64>,
    /// Put the negative square root into a
    #[arg(long)]
    pub minus_first: bool,
    #[command(flatten)]
    pub perturb: Perturb,
}

#[derive(Serialize)]
pub struct Quantity {
    pub label: String,
    #[serde(with = "serde_c64")]
    pub value: C64,
}

#[derive(Serialize)]
pub struct NamedForm {
    pub label: String,
    pub formula: String,
    pub form: HypergeometricForm,
}

#[derive(Serialize)]
pub struct Check {
    pub label: String,
    #[serde(flatten)]
    pub report: VerificationReport,
}

#[derive(Serialize)]
pub struct CaseReport {
    pub case: &'static str,
    pub inputs: Value,
    pub params: HeunParams,
    pub detected: ReductionReport,
    pub energies: Vec<Quantity>,
    pub forms: Vec<NamedForm>,
    pub verifications: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    pub notes: Vec<String>,
    /// Largest error over all verifications; null when none could run.
    pub max_rel_err: f64,
    pub pass: bool,
}

struct Builder {
    report: CaseReport,
}

impl Builder {
    fn new(case: &'static str, inputs: Value, params: HeunParams) -> Self {
        let detected = detect_cases(&params, TOL_CONDITION);
        Builder {
            report: CaseReport {
                case,
                inputs,
                params,
                detected,
                energies: Vec::new(),
                forms: Vec::new(),
                verifications: Vec::new(),
                details: Value::Null,
                notes: Vec::new(),
                max_rel_err: f64::NAN,
                pass: false,
            },
        }
    }

    fn energy(&mut self, label: &str, value: C64) {
        self.report.energies.push(Quantity { label: label.to_string(), value });
    }

    fn form(&mut self, label: &str, form: &HypergeometricForm) {
        self.report.forms.push(NamedForm { label: label.to_string(), formula: form.to_string(), form: form.clone() });
    }

    fn note(&mut self, note: impl Into<String>) {
        self.report.notes.push(note.into());
    }

    /// Checks that could not run are noted, not counted.
    fn check(&mut self, label: &str, outcome: Result<VerificationReport, Error>) {
        match outcome {
            Ok(report) => self.report.verifications.push(Check { label: label.to_string(), report }),
            Err(e) => self.note(format!("{label}: not run ({e})")),
        }
    }

    fn series_residual(&mut self, config: &Config, grid: &GridSpec) {
        let p = self.report.params;
        let outcome = heun_series(&p, config.order).and_then(|s| verify_solution(&p, &s, grid, config.tol));
        self.check("Frobenius series solves the equation", outcome);
    }

    fn finish(mut self) -> CaseReport {
        let r = &mut self.report;
        if r.verifications.is_empty() {
            r.notes.push("no verification could run".into());
        } else {
            r.max_rel_err = r.verifications.iter().fold(0.0f64, |m, c| if c.report.max_rel_err.is_nan() { f64::NAN } else { m.max(c.report.max_rel_err) });
            r.pass = r.verifications.iter().all(|c| c.report.pass);
        }
        self.report
    }
}

fn perturbed(p: &HeunParams, delta: f64) -> Result<HeunParams, CliError> {
    if delta == 0.0 {
        Ok(*p)
    } else {
        Ok(p.with_q(p.q() + delta)?)
    }
}

pub fn run(config: &Config, case: &CaseCommand) -> Result<Verdict, CliError> {
    let report = match case {
        CaseCommand::Coulomb(a) => coulomb(config, a)?,
        CaseCommand::InverseSquare(a) => inverse_square(config, a)?,
        CaseCommand::QuantumWalk(a) => quantum_walk(config, a)?,
        CaseCommand::ChargedParticle(a) => charged(config, a)?,
    };
    emit(config, &report, || render(&report))?;
    Ok(if report.pass { Verdict::Ok } else { Verdict::Failed })
}

fn quantum_walk(config: &Config, args: &QuantumWalkArgs) -> Result<CaseReport, CliError> {
    let d = args.d;
    let base = quantum_walk_params(&QuantumWalkInput { d })?;
    let p = perturbed(&base, args.perturb.perturb_q)?;
    let inputs = json!({"d": d, "perturb_q": args.perturb.perturb_q});
    let mut b = Builder::new("quantum-walk", inputs, p);
    // the series converges on |z| < min(1, d); [-0.5, 0.5] needs d ≥ 1
    let grid = if d >= 1.0 {
        GridSpec::Segment { from: real(-0.5), to: real(0.5), points: config.grid_points as usize }
    } else {
        default_grid(config)
    };
    if (d - 4.0).abs() <= 1e-12 {
        let form = reduce_cubic_d4(&base, TOL_CONDITION)?;
        b.form("limit density as a Gauss function", &form);
        b.check("series vs F(1/2, 1/2; 1/2; 1 - (z-1)^2 (1 - z/4))", verify_reduction(&p, &form, &grid, config.tol, config.order));
    } else {
        b.note("the cubic pull-back to the Gauss function exists only at d = 4");
    }
    let density = FnEvaluator(move |z: C64| -> Result<Jet, Error> { quantum_walk_density_jet(z, d) });
    let points = grid.points(p.series_radius());
    let vs_density = heun_series(&p, config.order).and_then(|s| compare(&s, &density, &points, config.tol));
    b.check("series vs normalized density √d/((1-z)√(d-z))", vs_density);
    b.check("density solves the equation", verify_solution(&p, &density, &grid, config.tol));
    b.note("density normalized to H(0) = 1; the printed factor √(1-d)/π only rescales it");
    Ok(b.finish())
}

fn coulomb(config: &Config, args: &CoulombArgs) -> Result<CaseReport, CliError> {
    let (m, gamma, beta) = (args.m, args.gamma, args.beta);
    let energy = args.energy.unwrap_or_else(|| trivial_energy(m, gamma));
    let input = CoulombSphereInput { m, gamma, beta, energy };
    let base = coulomb_params(&input)?;
    let p = perturbed(&base, args.perturb.perturb_q)?;
    let inputs = json!({
        "m": m,
        "gamma": fmt_c64(gamma),
        "beta": fmt_c64(beta),
        "energy": fmt_c64(energy),
        "perturb_q": args.perturb.perturb_q,
    });
    let mut b = Builder::new("coulomb3sphere", inputs, p);
    let grid = default_grid(config);
    b.energy("input energy E", energy);
    for n in 0..3 {
        b.energy(&format!("E_{n}"), coulomb_spectrum(n, m, gamma));
    }
    b.energy("energy at which ab = 0", trivial_energy(m, gamma));
    match coulomb_reduc_energy(beta, gamma, m) {
        Ok((e, n)) => {
            b.energy("E_reduc", e);
            b.energy("n_reduc", n);
        }
        Err(e) => b.note(format!("E_reduc: {e}")),
    }
    b.series_residual(config, &grid);

    if approx_zero(beta, TOL_CONDITION) {
        match reduce_harmonic_d_minus1(&base, TOL_CONDITION) {
            Ok(form) => {
                b.form("β = 0: F(a/2, b/2; (Γ+1)/2; z²)", &form);
                b.check("series vs F(a/2, b/2; (Γ+1)/2; z²)", verify_reduction(&p, &form, &grid, config.tol, config.order));
            }
            Err(e) => b.note(format!("β = 0 reduction: {e}")),
        }
        if let Ok(form) = coulomb_ground_state_form(&input) {
            b.form("ground state (ab = 0)", &form);
            b.check("series vs ground-state form", verify_reduction(&p, &form, &grid, config.tol, config.order));
        }
    }

    let mut details = serde_json::Map::new();
    match coulomb_legendre_case(m, gamma) {
        Ok(leg) => {
            b.form("E = -iγ (Legendre case)", &leg.form);
            b.check(
                "Legendre case: ordinary-point solution vs its Gauss form",
                verify_reduction(&leg.params, &leg.form, &grid, config.tol, config.order),
            );
            details.insert("legendre".into(), serde_json::to_value(&leg).unwrap_or(Value::Null));
        }
        Err(e) => b.note(format!("Legendre case: {e}")),
    }
    match coulomb_quartic_matching(m, 1e-10) {
        Ok(found) => {
            for f in &found {
                b.check(
                    &format!("quartic matching ({}): series vs pulled-back form", f.ordering),
                    verify_reduction(&f.params, &f.form, &grid, config.tol, config.order),
                );
                if !f.principal {
                    b.note(format!(
                        "quartic matching ({}): s₊ = {}, s₋ = {} are not both principal roots",
                        f.ordering,
                        fmt_c64(f.s_plus),
                        fmt_c64(f.s_minus)
                    ));
                }
            }
            details.insert("quartic_matching".into(), serde_json::to_value(&found).unwrap_or(Value::Null));
        }
        Err(e) => b.note(format!("quartic matching: {e}")),
    }
    b.report.details = Value::Object(details);
    Ok(b.finish())
}

fn inverse_square(config: &Config, args: &InverseSquareArgs) -> Result<CaseReport, CliError> {
    let input = InverseSquareInput { omega: args.omega, omega4: args.omega4, kappa: args.kappa };
    let base = inverse_square_params(&input)?;
    let p = perturbed(&base, args.perturb.perturb_q)?;
    let inputs = json!({"omega": args.omega, "omega4": args.omega4, "kappa": args.kappa, "perturb_q": args.perturb.perturb_q});
    let mut b = Builder::new("inverse-square", inputs, p);
    let grid = default_grid(config);
    b.series_residual(config, &grid);
    if (args.omega4 - 0.5).abs() <= TOL_CONDITION {
        let form = inverse_square_half_form(args.omega, args.kappa)?;
        b.form("ω₄ = 1/2", &form);
        b.check("series vs the ω₄ = 1/2 form", verify_reduction(&p, &form, &grid, config.tol, config.order));
    } else {
        b.note(format!("ω₄ = {} ≠ 1/2: Δ = {} and q - ab = {}, so no trivial case", args.omega4, fmt_c64(base.delta()), fmt_c64(base.q() - base.a() * base.b())));
    }
    let verdicts: Vec<_> = catalog_pairs().iter().map(inverse_square_feasibility).collect();
    if verdicts.iter().all(|v| !v.feasible) {
        b.note("no harmonic nontrivial reduction: every catalog pair is infeasible");
    }
    for v in &verdicts {
        b.note(format!("pair ({}, {}): {}", v.d, v.p, v.reason));
    }
    b.report.details = json!({"feasibility": verdicts});
    Ok(b.finish())
}

fn charged(config: &Config, args: &ChargedArgs) -> Result<CaseReport, CliError> {
    let mut input = ChargedParticleInput { s: args.s, m: args.m, r: args.r, l0: args.l0, eps_prime: 0.0 };
    let (ap, bp) = input.primes();
    let trivial = charged_particle_trivial_energy(ap, bp, args.s);
    input.eps_prime = args.eps_prime.unwrap_or(trivial);
    let order = if args.minus_first { RootOrder::MinusFirst } else { RootOrder::PlusFirst };
    let c = charged_particle_params(&input, order)?;
    let base = c.params;
    let p = perturbed(&base, args.perturb.perturb_q)?;
    let inputs = json!({
        "s": args.s,
        "m": args.m,
        "r": args.r,
        "l0": if args.l0.is_infinite() { json!("inf") } else { json!(args.l0) },
        "eps_prime": input.eps_prime,
        "root_order": order,
        "perturb_q": args.perturb.perturb_q,
    });
    let mut b = Builder::new("charged-particle", inputs, p);
    let grid = default_grid(config);
    b.energy("ε' at which ab = 0", real(trivial));
    b.energy("ε'", real(input.eps_prime));
    b.series_residual(config, &grid);
    if args.l0.is_infinite() {
        if c.complex_ab {
            b.note("4S² + 4ε' + 1 < 0: a and b are complex, the harmonic form is not checked");
        } else {
            let form = charged_particle_harmonic_form(&input)?;
            b.form("F(…; a'+1; z²)", &form);
            b.check("series vs F(…; a'+1; z²)", verify_reduction(&p, &form, &grid, config.tol, config.order));
        }
        if approx_zero(base.a() * base.b(), TOL_CONDITION) {
            // the path from the base point stays in the upper half plane, clear of 0, 1 and -1
            let quad = charged_particle_quadrature(&base, c64(0.3, 0.1), real(1.0), real(1.0))?;
            let qgrid = GridSpec::Segment { from: c64(0.15, 0.05), to: c64(0.6, 0.3), points: config.grid_points as usize };
            b.check("quadrature solves the equation", verify_solution(&p, &quad, &qgrid, config.tol));
        }
    } else {
        b.note("q ≠ 0: the Coulomb term keeps the equation out of every reduction with q = 0");
    }
    let orderings: Vec<_> = [RootOrder::PlusFirst, RootOrder::MinusFirst]
        .into_iter()
        .filter_map(|o| charged_particle_params(&input, o).ok())
        .collect();
    b.report.details = json!({"a_prime": ap, "b_prime": bp, "complex_ab": c.complex_ab, "orderings": orderings});
    Ok(b.finish())
}

fn render(r: &CaseReport) -> String {
    let mut s = format!("case {}\n{}\n", r.case, params_line(&r.params));
    for e in &r.energies {
        s.push_str(&format!("{} = {}\n", e.label, fmt_c64(e.value)));
    }
    if r.detected.is_empty() {
        s.push_str("detected: none\n");
    }
    for e in &r.detected.entries {
        s.push_str(&format!("detected {}: {}\n", e.case, e.conditions.join(", ")));
    }
    for f in &r.forms {
        s.push_str(&format!("{}: {}\n", f.label, f.formula));
    }
    for c in &r.verifications {
        s.push_str(&format!("{}: {}\n", c.label, summary(&c.report)));
    }
    for n in &r.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s.push_str(&format!("{} max_rel_err = {:.3e}\n", if r.pass { "PASS" } else { "FAIL" }, r.max_rel_err));
    s
}
