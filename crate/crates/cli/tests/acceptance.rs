//! End-to-end acceptance run: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use heun_core::identities::{apply, routes_to};
use heun_core::numerics::{eval_hyp_form, gauss_2f1, heun_eval, heun_series, ode_residual};
use heun_core::physics::charged::{
    charged_particle_harmonic_form, charged_particle_params, charged_particle_quadrature, charged_particle_trivial_energy,
    ChargedParticleInput, RootOrder,
};
use heun_core::physics::coulomb::{coulomb_params, coulomb_reduc_energy, coulomb_spectrum, coulomb_spectrum_at, CoulombSphereInput};
use heun_core::physics::inverse_square::{inverse_square_feasibility, inverse_square_half_form, inverse_square_params, InverseSquareInput};
use heun_core::physics::quantum_walk::{quantum_walk_params, QuantumWalkInput};
use heun_core::scalar::{c64, real, TOL_CONDITION};
use heun_core::verification::{verify_identity, verify_reduction, verify_solution};
use heun_core::{
    catalog_pairs, detect_cases, make_params, GridSpec, HeunParams, HypergeometricForm, IdentityId, PowerPrefactor, RationalMap,
    TransformResult, C64,
};
use num::{BigInt, BigRational, Complex, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(x: C64, y: C64) -> f64 {
    (x - y).norm() / x.norm().max(1.0)
}

fn complex(r: &mut impl Rng, scale: f64) -> C64 {
    c64(r.gen_range(-scale..scale), r.gen_range(-scale..scale))
}

/// Parameters with `d` off 0 and 1 and Γ a safe distance from the poles of the series.
fn random_params(r: &mut impl Rng) -> HeunParams {
    let d = loop {
        let d = complex(r, 4.0);
        if d.norm() > 0.25 && (d - 1.0).norm() > 0.25 {
            break d;
        }
    };
    random_params_at(r, d)
}

fn random_params_at(r: &mut impl Rng, d: C64) -> HeunParams {
    let g = loop {
        let g = complex(r, 2.5);
        if (0..=4).all(|k| (g + k as f64).norm() > 0.3) {
            break g;
        }
    };
    make_params(d, complex(r, 2.0), complex(r, 2.0), complex(r, 2.0), g, complex(r, 2.0)).unwrap()
}

fn params_close(x: &HeunParams, y: &HeunParams, tol: f64) -> bool {
    [(x.d(), y.d()), (x.q(), y.q()), (x.a(), y.a()), (x.b(), y.b()), (x.gamma(), y.gamma()), (x.delta(), y.delta())]
        .into_iter()
        .all(|(u, v)| (u - v).norm() <= tol * (1.0 + u.norm().max(v.norm())))
}

fn quantum_walk() -> Outcome {
    let start = Instant::now();
    let p = make_params(real(4.0), real(2.25), real(1.5), real(1.5), real(0.5), real(2.0)).map_err(|e| e.to_string())?;
    ensure(p.epsilon() == real(1.5), || format!("ε = {}", p.epsilon()))?;
    let series = heun_series(&p, 128).map_err(|e| e.to_string())?;
    // 1 - (z-1)²(1 - z/4) expanded by hand
    let arg = RationalMap::polynomial(vec![real(0.0), real(2.25), real(-1.5), real(0.25)]).map_err(|e| e.to_string())?;
    let form = HypergeometricForm::new(real(0.5), real(0.5), real(0.5), arg, PowerPrefactor::one());
    let (mut vs_form, mut vs_closed) = (0.0f64, 0.0f64);
    for k in 0..21 {
        let z = real(-0.5 + k as f64 / 20.0);
        let h = heun_eval(&series, z).map_err(|e| e.to_string())?.value;
        let f = eval_hyp_form(&form, z).map_err(|e| e.to_string())?;
        let closed = 2.0 / ((1.0 - z) * (4.0 - z).sqrt());
        vs_form = vs_form.max(rel(h, f));
        vs_closed = vs_closed.max(rel(h, closed));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(vs_form <= 1e-9, || format!("series vs Gauss form {vs_form:e}"))?;
    ensure(vs_closed <= 1e-9, || format!("series vs closed form {vs_closed:e}"))?;
    ensure(secs < 1.0, || format!("took {secs:.3} s"))?;
    Ok(format!("max err {vs_form:.1e} (form), {vs_closed:.1e} (closed form), {:.0} ms", secs * 1e3))
}

fn twice(p: &HeunParams, id: IdentityId) -> Result<TransformResult, String> {
    let e = |e: heun_core::Error| e.to_string();
    TransformResult::identity(p).then(id).map_err(e)?.then(id).map_err(e)
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let p = random_params(&mut r);
        for id in [IdentityId::Line5, IdentityId::Line9] {
            let t = twice(&p, id)?;
            ensure(params_close(&p, &t.params, 1e-12), || format!("{id} twice moved {p:?} to {:?}", t.params))?;
            ensure(t.arg_map.is_identity(1e-12), || format!("{id} twice: argument map {:?}", t.arg_map))?;
            for z in [c64(0.1, 0.0), c64(-0.2, 0.1), c64(0.05, -0.3)] {
                let v = t.prefactor.eval(z);
                ensure((v - 1.0).norm() <= 1e-12, || format!("{id} twice: prefactor {v} at {z}"))?;
            }
        }
    }
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = random_params(&mut r);
        for id in [IdentityId::Line5, IdentityId::Line9] {
            let rep = verify_identity(&p, id, &GridSpec::default(), 1e-8, 128).map_err(|e| e.to_string())?;
            ensure(rep.pass, || format!("{id} on {p:?}: {:e}", rep.max_rel_err))?;
            worst = worst.max(rep.max_rel_err);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("1000 involution sets, 100 function-level sets per identity, worst {worst:.1e}, {secs:.1} s"))
}

fn fuchsian_relation(p: &HeunParams) -> f64 {
    (p.a() + p.b() + 1.0 - p.gamma() - p.delta() - p.epsilon()).norm() / (1.0 + p.a().norm() + p.b().norm())
}

fn fuchsian_invariance() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut note = |p: &HeunParams, what: &str| -> Result<(), String> {
        let f = fuchsian_relation(p);
        worst = worst.max(f);
        ensure(f <= 1e-12, || format!("{what}: residual {f:e} for {p:?}"))
    };
    for _ in 0..1000 {
        let p = random_params(&mut r);
        for id in [IdentityId::Line5, IdentityId::Line9] {
            let t = apply(id, &p).map_err(|e| e.to_string())?.params;
            note(&t, &id.to_string())?;
        }
        let c = random_params_at(&mut r, real(-1.0));
        note(&apply(IdentityId::Line17, &c).map_err(|e| e.to_string())?.params, "line17")?;
        for target in [real(-1.0), real(2.0), real(0.5)] {
            for route in routes_to(&p, target, 1e-12) {
                note(&route.params, "composed route")?;
            }
        }

        let m: u32 = r.gen_range(0..6);
        let input = CoulombSphereInput { m, gamma: complex(&mut r, 3.0), beta: complex(&mut r, 3.0), energy: complex(&mut r, 5.0) };
        note(&coulomb_params(&input).map_err(|e| e.to_string())?, "coulomb")?;
        let omega = loop {
            let w: f64 = r.gen_range(-3.0..3.0);
            if (2.0 * w - 1.0).abs() > 0.05 && w.abs() > 0.05 {
                break w;
            }
        };
        let inv = InverseSquareInput { omega, omega4: r.gen_range(0.01..0.99), kappa: r.gen_range(0.01..5.0) };
        note(&inverse_square_params(&inv).map_err(|e| e.to_string())?, "inverse-square")?;
        let d: f64 = r.gen_range(0.3..8.0);
        if (d - 1.0).abs() > 0.05 {
            note(&quantum_walk_params(&QuantumWalkInput { d }).map_err(|e| e.to_string())?, "quantum walk")?;
        }
        let ch = ChargedParticleInput {
            s: r.gen_range(-3.0..3.0),
            m: r.gen_range(-3..4),
            r: r.gen_range(0.1..3.0),
            l0: if r.gen_bool(0.5) { f64::INFINITY } else { r.gen_range(0.1..10.0) },
            eps_prime: r.gen_range(-3.0..6.0),
        };
        for order in [RootOrder::PlusFirst, RootOrder::MinusFirst] {
            note(&charged_particle_params(&ch, order).map_err(|e| e.to_string())?.params, "charged particle")?;
        }
    }
    Ok(format!("identities, routes and four physics maps, worst residual {worst:.1e}"))
}

fn coulomb_consistency() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let mut worst0 = 0.0f64;
    for _ in 0..1000 {
        let m: u32 = r.gen_range(0..10);
        let g = complex(&mut r, 5.0);
        let mf = m as f64;
        let closed = mf * (mf + 2.0) - g * g / (4.0 * (1.0 + mf) * (1.0 + mf));
        let e = rel(closed, coulomb_spectrum(0, m, g));
        worst0 = worst0.max(e);
        ensure(e <= 1e-12, || format!("E_0 for m = {m}, γ = {g}: {e:e}"))?;
    }
    let (mut checked, mut worst) = (0, 0.0f64);
    while checked < 1000 {
        let m: u32 = r.gen_range(0..8);
        let (beta, gamma) = (complex(&mut r, 4.0), complex(&mut r, 4.0));
        if (beta - gamma).norm() < 1e-3 {
            continue;
        }
        let (e, n) = coulomb_reduc_energy(beta, gamma, m).map_err(|e| e.to_string())?;
        let err = rel(e, coulomb_spectrum_at(n, m, gamma));
        worst = worst.max(err);
        ensure(err <= 1e-10, || format!("β = {beta}, γ = {gamma}, m = {m}: {err:e}"))?;
        checked += 1;
    }
    Ok(format!("E_0 worst {worst0:.1e}, E_reduc on spectrum worst {worst:.1e}"))
}

fn coulomb_reduction() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let (mut checked, mut worst) = (0, 0.0f64);
    for m in [1u32, 2] {
        while checked < 30 * m as usize {
            let gamma = real(r.gen_range(-3.0..3.0));
            let energy = real(r.gen_range(-0.5..6.0));
            let p = coulomb_params(&CoulombSphereInput { m, gamma, beta: real(0.0), energy }).map_err(|e| e.to_string())?;
            if (0..4).any(|k| (p.gamma() + k as f64).norm() < 0.2) {
                continue;
            }
            let arg = RationalMap::polynomial(vec![real(0.0), real(0.0), real(1.0)]).map_err(|e| e.to_string())?;
            let form = HypergeometricForm::new(p.a() / 2.0, p.b() / 2.0, (p.gamma() + 1.0) / 2.0, arg, PowerPrefactor::one());
            let rep = verify_reduction(&p, &form, &GridSpec::default(), 1e-8, 128).map_err(|e| e.to_string())?;
            ensure(rep.pass, || format!("m = {m}, γ = {gamma}, E = {energy}: {:e}", rep.max_rel_err))?;
            worst = worst.max(rep.max_rel_err);
            checked += 1;
        }
    }
    Ok(format!("{checked} (m, γ, E) samples, worst {worst:.1e}"))
}

fn inverse_square() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let omega = if r.gen_bool(0.5) { r.gen_range(0.6..4.0) } else { r.gen_range(-4.0..-0.1) };
        let kappa = r.gen_range(0.05..4.0);
        let p = inverse_square_params(&InverseSquareInput { omega, omega4: 0.5, kappa }).map_err(|e| e.to_string())?;
        let f = inverse_square_half_form(omega, kappa).map_err(|e| e.to_string())?;
        let rep = verify_reduction(&p, &f, &GridSpec::default(), 1e-8, 128).map_err(|e| e.to_string())?;
        ensure(rep.pass, || format!("ω = {omega}, κ = {kappa}: {:e}", rep.max_rel_err))?;
        worst = worst.max(rep.max_rel_err);
    }
    for _ in 0..200 {
        let omega4 = loop {
            let w: f64 = r.gen_range(0.01..0.99);
            if (w - 0.5).abs() > 1e-3 {
                break w;
            }
        };
        let input = InverseSquareInput { omega: r.gen_range(0.6..4.0), omega4, kappa: r.gen_range(0.05..4.0) };
        let p = inverse_square_params(&input).map_err(|e| e.to_string())?;
        ensure(!detect_cases(&p, TOL_CONDITION).has_trivial(), || format!("trivial case at {input:?}"))?;
    }
    let pairs = catalog_pairs();
    for pair in &pairs {
        let v = inverse_square_feasibility(pair);
        ensure(!v.feasible, || format!("pair ({}, {}) reported feasible", v.d, v.p))?;
    }
    Ok(format!("ω₄ = 1/2 worst {worst:.1e}; no trivial case off 1/2; {} catalog pairs infeasible", pairs.len()))
}

fn charged_particle() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let mut worst_q = 0.0f64;
    for _ in 0..20 {
        let s: f64 = r.gen_range(-2.0..2.0);
        let mut input = ChargedParticleInput { s, m: r.gen_range(-2..3), r: 1.0, l0: f64::INFINITY, eps_prime: 0.0 };
        let (ap, bp) = input.primes();
        input.eps_prime = charged_particle_trivial_energy(ap, bp, s);
        let c = charged_particle_params(&input, RootOrder::PlusFirst).map_err(|e| e.to_string())?;
        ensure(c.params.q().norm() == 0.0, || format!("q = {}", c.params.q()))?;
        let sol = charged_particle_quadrature(&c.params, c64(0.3, 0.1), real(0.5), real(2.0)).map_err(|e| e.to_string())?;
        let grid = GridSpec::Segment { from: c64(0.15, 0.05), to: c64(0.6, 0.3), points: 11 };
        let rep = verify_solution(&c.params, &sol, &grid, 1e-8).map_err(|e| e.to_string())?;
        ensure(rep.pass, || format!("quadrature for {input:?}: {:e}", rep.max_rel_err))?;
        worst_q = worst_q.max(rep.max_rel_err);
    }
    let (mut checked, mut worst_h) = (0, 0.0f64);
    while checked < 40 {
        let input = ChargedParticleInput {
            s: r.gen_range(-2.0..2.0),
            m: r.gen_range(-2..3),
            r: 1.0,
            l0: f64::INFINITY,
            eps_prime: r.gen_range(-1.0..6.0),
        };
        let c = charged_particle_params(&input, RootOrder::PlusFirst).map_err(|e| e.to_string())?;
        if c.complex_ab {
            continue;
        }
        let f = charged_particle_harmonic_form(&input).map_err(|e| e.to_string())?;
        let rep = verify_reduction(&c.params, &f, &GridSpec::default(), 1e-8, 128).map_err(|e| e.to_string())?;
        ensure(rep.pass, || format!("harmonic form for {input:?}: {:e}", rep.max_rel_err))?;
        worst_h = worst_h.max(rep.max_rel_err);
        checked += 1;
    }
    Ok(format!("quadrature worst {worst_q:.1e}, F(…; a'+1; z²) worst {worst_h:.1e}"))
}

type Q = Complex<BigRational>;

fn exact(z: C64) -> Q {
    let f = |x: f64| BigRational::from_float(x).expect("finite parameter");
    Complex::new(f(z.re), f(z.im))
}

fn approx(z: &Q) -> C64 {
    C64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

fn int(n: usize) -> Q {
    Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

/// Power coefficients of `z(z-1)(z-d) L[z^j]`, expanded straight from the
/// operator in exact arithmetic.
fn operator_on_monomial(p: &HeunParams, j: usize) -> Vec<Q> {
    let [d, q, a, b, g, dl, e] = [p.d(), p.q(), p.a(), p.b(), p.gamma(), p.delta(), p.epsilon()].map(exact);
    let one = int(1);
    let mut out = vec![Q::zero(); j + 4];
    let jj = int(j);
    if j >= 2 {
        // z(z-1)(z-d) = z³ - (1+d) z² + d z
        let w = &jj * &int(j - 1);
        for (k, c) in [(3, one.clone()), (2, -(&one + &d)), (1, d.clone())] {
            out[k + j - 2] = &out[k + j - 2] + &w * &c;
        }
    }
    if j >= 1 {
        // Γ(z-1)(z-d) + Δ z(z-d) + ε z(z-1)
        let linear = [
            (2, &(&g + &dl) + &e),
            (1, -(&(&g * &(&one + &d)) + &(&(&dl * &d) + &e))),
            (0, &g * &d),
        ];
        for (k, c) in linear {
            out[k + j - 1] = &out[k + j - 1] + &jj * &c;
        }
    }
    out[j + 1] = &out[j + 1] + &a * &b;
    out[j] = &out[j] - &q;
    out
}

/// `c_0..c_N` from the lowest `N` power-coefficient equations with `c_0 = 1`.
/// Equation `k` involves `c_0..c_{k+1}` only, so forward substitution solves
/// it exactly and the first `n` unknowns are those of every smaller `N`.
fn brute_force_coefficients(p: &HeunParams, n: usize) -> Vec<C64> {
    let columns: Vec<Vec<Q>> = (0..=n).map(|j| operator_on_monomial(p, j)).collect();
    let mut c: Vec<Q> = vec![int(1)];
    for k in 0..n {
        let mut rhs = Q::zero();
        // column j is zero above power j + 2
        for (j, cj) in c.iter().enumerate().filter(|(j, _)| k <= j + 2) {
            rhs = &rhs - &(&columns[j][k] * cj);
        }
        c.push(&rhs / &columns[k + 1][k]);
    }
    c.iter().map(approx).collect()
}

fn numerics_oracles() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let mut worst_c = 0.0f64;
    for _ in 0..200 {
        let p = random_params(&mut r);
        let series = heun_series(&p, 16).map_err(|e| e.to_string())?;
        for (j, c) in brute_force_coefficients(&p, 12).iter().enumerate() {
            let e = rel(*c, series.coefficients[j]);
            worst_c = worst_c.max(e);
            ensure(e <= 1e-12, || format!("c_{j}: {e:e} for {p:?}"))?;
        }
    }
    let disc: Vec<C64> = (0..16)
        .flat_map(|k| [0.1, 0.4, 0.7, 1.0].map(|s| C64::from_polar(0.75 * s, std::f64::consts::PI * k as f64 / 8.0)))
        .collect();
    let mut worst_g = 0.0f64;
    for _ in 0..40 {
        let a = complex(&mut r, 3.0);
        let b = loop {
            let b = complex(&mut r, 2.5);
            if (0..=4).all(|k| (b + k as f64).norm() > 0.3) {
                break b;
            }
        };
        for &x in &disc {
            let e = rel((1.0 - x).powc(-a), gauss_2f1(a, b, b, x).map_err(|e| e.to_string())?);
            worst_g = worst_g.max(e);
            ensure(e <= 1e-12, || format!("(1-x)^(-a) at a = {a}, x = {x}: {e:e}"))?;
        }
    }
    for &x in &disc {
        let e = rel(-(1.0 - x).ln() / x, gauss_2f1(real(1.0), real(1.0), real(2.0), x).map_err(|e| e.to_string())?);
        worst_g = worst_g.max(e);
        ensure(e <= 1e-12, || format!("-ln(1-x)/x at x = {x}: {e:e}"))?;
    }
    let mut worst_r = 0.0f64;
    for _ in 0..200 {
        let p = random_params(&mut r);
        let s = heun_series(&p, 128).map_err(|e| e.to_string())?;
        let limit = 0.5 * p.d().norm().min(1.0);
        for k in 0..12 {
            let z = C64::from_polar(limit * (0.2 + 0.8 * (k % 4) as f64 / 3.0), 0.5 * k as f64);
            let h = heun_eval(&s, z).map_err(|e| e.to_string())?;
            let res = ode_residual(&p, h.value, h.d1, h.d2, z).map_err(|e| e.to_string())? / h.value.norm().max(1.0);
            worst_r = worst_r.max(res);
            ensure(res <= 1e-10, || format!("residual {res:e} at z = {z} for {p:?}"))?;
        }
    }
    Ok(format!("coefficients {worst_c:.1e}, 2F1 {worst_g:.1e}, residual {worst_r:.1e}"))
}

fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_heun");
    let out = Command::new(bin).args(["--json", "case", "quantum-walk"]).output().map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("report is not JSON: {e}"))?;
    let err = report["max_rel_err"].as_f64().ok_or("max_rel_err missing")?;
    ensure(err <= 1e-9, || format!("max_rel_err {err:e}"))?;
    let perturbed = Command::new(bin).args(["case", "quantum-walk", "--perturb-q", "1e-3"]).output().map_err(|e| e.to_string())?;
    ensure(perturbed.status.code() == Some(1), || format!("perturbed run exited {:?}", perturbed.status.code()))?;
    Ok(format!("max_rel_err {err:.1e}, perturbed q exits 1"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("quantum-walk reduction", quantum_walk),
        ("identity suite", identity_suite),
        ("Fuchsian invariance", fuchsian_invariance),
        ("Coulomb spectrum consistency", coulomb_consistency),
        ("Coulomb β = 0 reduction", coulomb_reduction),
        ("inverse-square verdicts", inverse_square),
        ("charged particle", charged_particle),
        ("numerics oracles", numerics_oracles),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
