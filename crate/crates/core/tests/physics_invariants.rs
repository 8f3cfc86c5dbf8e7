mod common;

use common::{complex, rng};
use heun_core::physics::charged::{
    charged_particle_harmonic_form, charged_particle_params, charged_particle_quadrature, charged_particle_trivial_energy,
    ChargedParticleInput, RootOrder,
};
use heun_core::physics::coulomb::{
    coulomb_params, coulomb_reduc_energy, coulomb_spectrum, coulomb_spectrum_at, params_from_roots, trivial_energy,
    CoulombSphereInput,
};
use heun_core::physics::inverse_square::{inverse_square_feasibility, inverse_square_half_form, inverse_square_params, InverseSquareInput};
use heun_core::physics::quantum_walk::{quantum_walk_params, QuantumWalkInput};
use heun_core::scalar::{c64, real, TOL_CONDITION, TOL_EXACT};
use heun_core::verification::{verify_reduction, verify_solution};
use heun_core::{
    catalog_pairs, detect_cases, validate, CaseTag, GridSpec, HeunParams, HypergeometricForm, PowerPrefactor, RationalMap, C64,
};
use rand::Rng;

fn rel_close(x: C64, y: C64, tol: f64) -> bool {
    (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0)
}

fn assert_fuchsian(p: &HeunParams, epsilon: C64) {
    assert!(validate(p, TOL_EXACT).is_valid(), "{p:?}");
    assert!(rel_close(p.epsilon(), epsilon, 1e-12), "ε = {} expected {epsilon}", p.epsilon());
}

#[test]
fn physics_maps_preserve_the_fuchsian_relation() {
    let mut r = rng(51);
    for _ in 0..1000 {
        let m: u32 = r.gen_range(0..6);
        let input = CoulombSphereInput { m, gamma: complex(&mut r, 3.0), beta: complex(&mut r, 3.0), energy: complex(&mut r, 5.0) };
        // Coulomb: Δ = ε = m + 1
        assert_fuchsian(&coulomb_params(&input).unwrap(), real(m as f64 + 1.0));
        let sp = complex(&mut r, 2.0);
        assert_fuchsian(&params_from_roots(m, sp, complex(&mut r, 2.0), input.beta).unwrap(), real(m as f64 + 1.0));

        let omega = loop {
            let w: f64 = r.gen_range(-3.0..3.0);
            if (2.0 * w - 1.0).abs() > 0.05 && w.abs() > 0.05 {
                break w;
            }
        };
        let inv = InverseSquareInput { omega, omega4: r.gen_range(0.01..0.99), kappa: r.gen_range(0.01..5.0) };
        assert_fuchsian(&inverse_square_params(&inv).unwrap(), real(2.0));

        let d: f64 = r.gen_range(0.3..8.0);
        if (d - 1.0).abs() > 0.05 {
            assert_fuchsian(&quantum_walk_params(&QuantumWalkInput { d }).unwrap(), real(1.5));
        }

        let ch = ChargedParticleInput {
            s: r.gen_range(-3.0..3.0),
            m: r.gen_range(-3..4),
            r: r.gen_range(0.1..3.0),
            l0: if r.gen_bool(0.5) { f64::INFINITY } else { r.gen_range(0.1..10.0) },
            eps_prime: r.gen_range(-3.0..6.0),
        };
        for order in [RootOrder::PlusFirst, RootOrder::MinusFirst] {
            let c = charged_particle_params(&ch, order).unwrap();
            assert_fuchsian(&c.params, real(c.b_prime + 1.0));
        }
    }
}

#[test]
fn ground_state_energy_is_the_first_level() {
    let mut r = rng(52);
    for _ in 0..1000 {
        let m: u32 = r.gen_range(0..10);
        let g = if r.gen_bool(0.5) { real(r.gen_range(-5.0..5.0)) } else { complex(&mut r, 5.0) };
        let mf = m as f64;
        let closed = mf * (mf + 2.0) - g * g / (4.0 * (1.0 + mf) * (1.0 + mf));
        assert!(rel_close(coulomb_spectrum(0, m, g), closed, 1e-12));
        assert!(rel_close(trivial_energy(m, g), closed, 1e-12));
        // 1 + E ± iγ = (m + 1 ± iγ/(2(m+1)))², and the principal roots pick
        // exactly these when Im γ is small, so that b = 0
        if g.im == 0.0 {
            let p = coulomb_params(&CoulombSphereInput { m, gamma: g, beta: real(0.0), energy: closed }).unwrap();
            assert!((p.a() * p.b()).norm() <= 1e-9 * (1.0 + p.a().norm()));
        }
    }
}

#[test]
fn reduction_energy_lies_on_the_spectrum() {
    let mut r = rng(53);
    let mut checked = 0;
    while checked < 1000 {
        let m: u32 = r.gen_range(0..8);
        let (beta, gamma) = if r.gen_bool(0.5) {
            (real(r.gen_range(-4.0..4.0)), real(r.gen_range(-4.0..4.0)))
        } else {
            (complex(&mut r, 4.0), complex(&mut r, 4.0))
        };
        if (beta - gamma).norm() < 1e-3 {
            continue;
        }
        let (e, n) = coulomb_reduc_energy(beta, gamma, m).unwrap();
        let on_spectrum = coulomb_spectrum_at(n, m, gamma);
        assert!(rel_close(on_spectrum, e, 1e-10), "β = {beta}, γ = {gamma}, m = {m}: {on_spectrum} vs {e}");
        checked += 1;
    }
    assert!(coulomb_reduc_energy(real(1.0), real(1.0), 2).is_err());
}

/// `F(a/2, b/2; (Γ+1)/2; z²)` built from the parameters by hand.
fn harmonic_form(p: &HeunParams) -> HypergeometricForm {
    let arg = RationalMap::polynomial(vec![real(0.0), real(0.0), real(1.0)]).unwrap();
    HypergeometricForm::new(p.a() / 2.0, p.b() / 2.0, (p.gamma() + 1.0) / 2.0, arg, PowerPrefactor::one())
}

#[test]
fn coulomb_zero_beta_reduces_to_a_quadratic_argument() {
    let mut r = rng(54);
    for m in [1u32, 2] {
        for _ in 0..30 {
            let gamma = real(r.gen_range(-3.0..3.0));
            let energy = real(r.gen_range(-0.5..6.0));
            let p = coulomb_params(&CoulombSphereInput { m, gamma, beta: real(0.0), energy }).unwrap();
            if (0..4).any(|k| (p.gamma() + k as f64).norm() < 0.2) {
                continue;
            }
            let rep = verify_reduction(&p, &harmonic_form(&p), &GridSpec::default(), 1e-8, 128).unwrap();
            assert!(rep.pass, "m = {m}, γ = {gamma}, E = {energy}: {rep:?}");
            assert!(detect_cases(&p, TOL_CONDITION).has(CaseTag::Nontrivial { d: -1.0, p: 0.0 }));
        }
    }
}

#[test]
fn inverse_square_half_omega4_matches_its_form() {
    let mut r = rng(55);
    for _ in 0..40 {
        let omega = if r.gen_bool(0.5) { r.gen_range(0.6..4.0) } else { r.gen_range(-4.0..-0.1) };
        let kappa = r.gen_range(0.05..4.0);
        let p = inverse_square_params(&InverseSquareInput { omega, omega4: 0.5, kappa }).unwrap();
        let f = inverse_square_half_form(omega, kappa).unwrap();
        let rep = verify_reduction(&p, &f, &GridSpec::default(), 1e-8, 128).unwrap();
        assert!(rep.pass, "ω = {omega}, κ = {kappa}: {rep:?}");
    }
}

#[test]
fn inverse_square_case2_fires_only_at_half() {
    let mut r = rng(56);
    let tol = TOL_CONDITION;
    for _ in 0..300 {
        let omega = r.gen_range(0.6..4.0);
        let kappa = r.gen_range(0.05..4.0);
        for offset in [0.0, 1e-13, -1e-13, 1e-6, -1e-6, r.gen_range(-0.49..0.49)] {
            let omega4 = 0.5 + offset;
            let p = inverse_square_params(&InverseSquareInput { omega, omega4, kappa }).unwrap();
            let fired = detect_cases(&p, tol).has(CaseTag::Case2Delta0);
            assert_eq!(fired, offset.abs() <= tol, "ω₄ = {omega4}");
        }
    }
}

#[test]
fn inverse_square_away_from_half_has_no_reduction() {
    let mut r = rng(57);
    for _ in 0..200 {
        let omega = if r.gen_bool(0.5) { r.gen_range(0.6..4.0) } else { r.gen_range(-4.0..-0.1) };
        let omega4 = loop {
            let w: f64 = r.gen_range(0.01..0.99);
            if (w - 0.5).abs() > 1e-3 {
                break w;
            }
        };
        let p = inverse_square_params(&InverseSquareInput { omega, omega4, kappa: r.gen_range(0.05..4.0) }).unwrap();
        assert!(!detect_cases(&p, TOL_CONDITION).has_trivial());
    }
    for pair in catalog_pairs() {
        assert!(!inverse_square_feasibility(&pair).feasible);
    }
}

#[test]
fn charged_particle_quadrature_solves_the_equation() {
    let mut r = rng(58);
    for _ in 0..20 {
        let s: f64 = r.gen_range(-2.0..2.0);
        let m: i32 = r.gen_range(-2..3);
        let mut input = ChargedParticleInput { s, m, r: 1.0, l0: f64::INFINITY, eps_prime: 0.0 };
        let (ap, bp) = input.primes();
        input.eps_prime = charged_particle_trivial_energy(ap, bp, s);
        let c = charged_particle_params(&input, RootOrder::PlusFirst).unwrap();
        let p = c.params;
        let report = detect_cases(&p, TOL_CONDITION);
        assert!(report.has(CaseTag::Case4Trivial), "{p:?}");
        let sol = charged_particle_quadrature(&p, c64(0.3, 0.1), real(0.5), real(2.0)).unwrap();
        let grid = GridSpec::Segment { from: c64(0.15, 0.05), to: c64(0.6, 0.3), points: 11 };
        let v = verify_solution(&p, &sol, &grid, 1e-8).unwrap();
        assert!(v.pass, "S = {s}, m = {m}: {v:?}");
    }
}

#[test]
fn charged_particle_harmonic_form_matches() {
    let mut r = rng(59);
    let mut checked = 0;
    while checked < 40 {
        let input = ChargedParticleInput {
            s: r.gen_range(-2.0..2.0),
            m: r.gen_range(-2..3),
            r: 1.0,
            l0: f64::INFINITY,
            eps_prime: r.gen_range(-1.0..6.0),
        };
        let c = charged_particle_params(&input, RootOrder::PlusFirst).unwrap();
        if c.complex_ab {
            continue;
        }
        let f = charged_particle_harmonic_form(&input).unwrap();
        let rep = verify_reduction(&c.params, &f, &GridSpec::default(), 1e-8, 128).unwrap();
        assert!(rep.pass, "{input:?}: {rep:?}");
        checked += 1;
    }
}
