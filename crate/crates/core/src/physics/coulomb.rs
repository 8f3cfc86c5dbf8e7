//! Coulomb problem on the 3-sphere, `d = -1`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::identities::apply_line17;
use crate::maps::{PowerPrefactor, RationalMap};
use crate::params::{make_params, HeunParams};
use crate::reduction::{reduce_case3, reduce_quartic_d2, HypergeometricForm};
use crate::scalar::{approx_eq, c64, fmt_c64, real, serde_c64, C64, TOL_CONDITION};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoulombSphereInput {
    /// Axial quantum number, used through its absolute value.
    pub m: u32,
    #[serde(with = "serde_c64")]
    pub gamma: C64,
    #[serde(with = "serde_c64")]
    pub beta: C64,
    #[serde(with = "serde_c64")]
    pub energy: C64,
}

/// `(√(1+E+iγ), √(1+E-iγ))`, principal roots.
pub fn roots(energy: C64, gamma: C64) -> (C64, C64) {
    let i = C64::i();
    ((1.0 + energy + i * gamma).sqrt(), (1.0 + energy - i * gamma).sqrt())
}

/// Parameters for explicit roots `s₊² = 1+E+iγ`, `s₋² = 1+E-iγ`:
/// `Γ = 1 - s₊`, `Δ = ε = m + 1`, `q = iβ/2`,
/// `a = 1 + m + (s₋ - s₊)/2`, `b = 1 + m - (s₋ + s₊)/2`.
pub fn params_from_roots(m: u32, s_plus: C64, s_minus: C64, beta: C64) -> Result<HeunParams, Error> {
    let mf = m as f64;
    let gamma_h = 1.0 - s_plus;
    let a = 1.0 + mf + (s_minus - s_plus) / 2.0;
    let b = 1.0 + mf - (s_minus + s_plus) / 2.0;
    make_params(real(-1.0), C64::i() * beta / 2.0, a, b, gamma_h, real(mf + 1.0))
}

pub fn coulomb_params(input: &CoulombSphereInput) -> Result<HeunParams, Error> {
    let (sp, sm) = roots(input.energy, input.gamma);
    params_from_roots(input.m, sp, sm, input.beta)
}

/// `E_n = (n+m)(n+m+2) - γ²/(4(n+1+m)²)`, for complex `n` as well.
pub fn coulomb_spectrum_at(n: C64, m: u32, gamma: C64) -> C64 {
    let k = n + m as f64;
    k * (k + 2.0) - gamma * gamma / (4.0 * (k + 1.0) * (k + 1.0))
}

pub fn coulomb_spectrum(n: u32, m: u32, gamma: C64) -> C64 {
    coulomb_spectrum_at(real(n as f64), m, gamma)
}

/// Ground-state energy of the `ab = 0` case, `m(m+2) - γ²/(4(1+m)²)`.
pub fn trivial_energy(m: u32, gamma: C64) -> C64 {
    let mf = m as f64;
    mf * (mf + 2.0) - gamma * gamma / (4.0 * (1.0 + mf) * (1.0 + mf))
}

/// `F((m+1)/2 - (√C₁ - √(C₁-8iγ))/8, (m+1)/2 - (√C₁ + √(C₁-8iγ))/8; 1 - √C₁/4; z²)`,
/// `C₁ = 4(E + iγ + 1)`, valid when `ab = 0` and `β = 0`.
pub fn coulomb_ground_state_form(input: &CoulombSphereInput) -> Result<HypergeometricForm, Error> {
    let p = coulomb_params(input)?;
    let mut failed = Vec::new();
    if !approx_eq(input.beta, C64::zero(), TOL_CONDITION) {
        failed.push(format!("β = 0 fails: β = {}", fmt_c64(input.beta)));
    }
    if !approx_eq(p.a() * p.b(), C64::zero(), TOL_CONDITION) {
        failed.push(format!("ab = 0 fails: ab = {}", fmt_c64(p.a() * p.b())));
    }
    if !failed.is_empty() {
        return Err(Error::ConditionsViolated(failed));
    }
    let i = C64::i();
    let c1 = 4.0 * (input.energy + i * input.gamma + 1.0);
    let (r1, r2) = (c1.sqrt(), (c1 - 8.0 * i * input.gamma).sqrt());
    let half = (input.m as f64 + 1.0) / 2.0;
    let arg = RationalMap::polynomial(vec![C64::zero(), C64::zero(), C64::new(1.0, 0.0)])?;
    Ok(HypergeometricForm::new(half - (r1 - r2) / 8.0, half - (r1 + r2) / 8.0, 1.0 - r1 / 4.0, arg, PowerPrefactor::one()))
}

/// `(E_reduc, n_reduc)`: the energy at which line 17 followed by the `(2,1)`
/// condition holds, and the spectral index reproducing it,
/// `n_reduc = -(1+m)β/(β-γ)`.
pub fn coulomb_reduc_energy(beta: C64, gamma: C64, m: u32) -> Result<(C64, C64), Error> {
    let diff = beta - gamma;
    if diff.norm() <= 1e-12 * (1.0 + beta.norm().max(gamma.norm())) {
        return Err(Error::InvalidInput(String::from("β = γ is a pole of the reduction energy")));
    }
    let mf = m as f64;
    let m1 = (mf + 1.0) * (mf + 1.0);
    let (b2, g2) = (beta * beta, gamma * gamma);
    let num = -b2 * b2 + 4.0 * gamma * b2 * beta - 2.0 * (3.0 * g2 + 2.0 * m1) * b2
        + 4.0 * (g2 * gamma + 2.0 * m1 * gamma) * beta
        - g2 * g2
        + 4.0 * mf * (mf + 2.0) * m1 * g2;
    let energy = num / (4.0 * m1 * diff * diff);
    let n = -(1.0 + mf) * beta / diff;
    Ok((energy, n))
}

/// Imaginary-energy case `E = -iγ`, `β = 0`: `Γ = 0`, `q = 0`, and the
/// equation is Legendre's with `λ = (√(1-2iγ) - 1)/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LegendreCase {
    pub params: HeunParams,
    #[serde(with = "serde_c64")]
    pub energy: C64,
    #[serde(with = "serde_c64")]
    pub lambda: C64,
    pub order: u32,
    pub representation: String,
    pub form: HypergeometricForm,
}

pub fn coulomb_legendre_case(m: u32, gamma: C64) -> Result<LegendreCase, Error> {
    let energy = -C64::i() * gamma;
    let input = CoulombSphereInput { m, gamma, beta: C64::zero(), energy };
    let params = coulomb_params(&input)?;
    let form = reduce_case3(&params, TOL_CONDITION)?;
    let lambda = ((1.0 - 2.0 * C64::i() * gamma).sqrt() - 1.0) / 2.0;
    let representation = format!("(z² - 1)^(-{m}/2) [P^{m}_λ(z) + Q^{m}_λ(z)], λ = {}", fmt_c64(lambda));
    Ok(LegendreCase { params, energy, lambda, order: m, representation, form })
}

/// One solution of the matching between the line-17 image of the Coulomb
/// parameters and the `(2,1)` quartic family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuarticMatch {
    /// `"a,b"` or `"b,a"`: which Coulomb exponent plays the role of `a`.
    pub ordering: &'static str,
    #[serde(with = "serde_c64")]
    pub s_plus: C64,
    #[serde(with = "serde_c64")]
    pub s_minus: C64,
    #[serde(with = "serde_c64")]
    pub beta: C64,
    #[serde(with = "serde_c64")]
    pub gamma: C64,
    #[serde(with = "serde_c64")]
    pub energy: C64,
    /// Both roots are the principal square roots, as the parameter map assumes.
    pub principal: bool,
    /// `n` with `E_n = E`, all branches.
    #[serde(with = "crate::scalar::serde_c64_vec")]
    pub spectral_n: Vec<C64>,
    /// `n_reduc(β, γ, m)` when `β ≠ γ`.
    #[serde(with = "crate::scalar::serde_c64_opt")]
    pub n_reduc: Option<C64>,
    pub residual: f64,
    pub params: HeunParams,
    pub form: HypergeometricForm,
}

fn matching_residual(m: u32, swapped: bool, x: [C64; 3]) -> [C64; 3] {
    let mf = m as f64;
    let [sp, sm, beta] = x;
    let (a, b) = (1.0 + mf + (sm - sp) / 2.0, 1.0 + mf - (sm + sp) / 2.0);
    let (a, b) = if swapped { (b, a) } else { (a, b) };
    let (g, dl, q) = (1.0 - sp, real(mf + 1.0), C64::i() * beta / 2.0);
    // line 17 image: q' = aΓ - q, b' = Δ + Γ - b
    let (qp, ap, bp) = (a * g - q, a, dl + g - b);
    [dl - (ap + bp) / 2.0, g - (ap + bp + 2.0) / 4.0, qp - ap * bp]
}

fn solve3(mut a: [[C64; 3]; 3], mut b: [C64; 3]) -> Option<[C64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (x, t) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *x -= f * t;
            }
            let t = b[col];
            b[row] -= f * t;
        }
    }
    let mut x = [C64::zero(); 3];
    for row in (0..3).rev() {
        let s = (row + 1..3).fold(b[row], |acc, k| acc - a[row][k] * x[k]);
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Newton iteration with a forward-difference Jacobian; the system is
/// polynomial, so complex differences are exact up to rounding.
fn newton(m: u32, swapped: bool, start: [C64; 3], tol: f64) -> Option<([C64; 3], f64)> {
    let mut x = start;
    for _ in 0..60 {
        let f = matching_residual(m, swapped, x);
        let norm = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if norm <= tol {
            return Some((x, norm));
        }
        let mut jac = [[C64::zero(); 3]; 3];
        for k in 0..3 {
            let h = 1e-7 * (1.0 + x[k].norm());
            let mut xh = x;
            xh[k] += h;
            let fh = matching_residual(m, swapped, xh);
            for row in 0..3 {
                jac[row][k] = (fh[row] - f[row]) / h;
            }
        }
        let step = solve3(jac, [-f[0], -f[1], -f[2]])?;
        for k in 0..3 {
            x[k] += step[k];
        }
    }
    None
}

/// `n` with `(n+m)(n+m+2) - γ²/(4(n+m+1)²) = E`: with `u = (n+m+1)²`,
/// `u² - (E+1)u - γ²/4 = 0`.
pub fn spectral_indices(energy: C64, gamma: C64, m: u32) -> Vec<C64> {
    let e1 = energy + 1.0;
    let disc = (e1 * e1 + gamma * gamma).sqrt();
    let mut out: Vec<C64> = Vec::new();
    for u in [(e1 + disc) / 2.0, (e1 - disc) / 2.0] {
        for k in [u.sqrt(), -u.sqrt()] {
            let n = k - (m as f64 + 1.0);
            if !out.iter().any(|o| (*o - n).norm() < 1e-9) {
                out.push(n);
            }
        }
    }
    out
}

/// Solves the matching conditions `Δ' = (a'+b')/2`, `Γ' = (a'+b'+2)/4`,
/// `q' = a'b'` for `(s₊, s₋, β)`, for both orderings of `a, b`.
pub fn coulomb_quartic_matching(m: u32, tol: f64) -> Result<Vec<QuarticMatch>, Error> {
    let starts = [
        [c64(1.0, 0.1), c64(1.0, -0.1), c64(0.1, 0.1)],
        [c64(-1.0, 0.2), c64(0.5, 0.3), c64(-0.3, 0.2)],
    ];
    let mut found = Vec::new();
    for swapped in [false, true] {
        let mut roots: Vec<[C64; 3]> = Vec::new();
        for start in starts {
            let Some((x, residual)) = newton(m, swapped, start, tol) else { continue };
            if roots.iter().any(|r| (0..3).all(|k| (r[k] - x[k]).norm() < 1e-8)) {
                continue;
            }
            roots.push(x);
            let [sp, sm, beta] = x;
            let gamma = (sp * sp - sm * sm) / (2.0 * C64::i());
            let energy = (sp * sp + sm * sm) / 2.0 - 1.0;
            let (pp, pm) = roots_principal(sp, sm);
            let mut params = params_from_roots(m, sp, sm, beta)?;
            if swapped {
                params = params.swap_ab();
            }
            let t = apply_line17(&params)?;
            let form = reduce_quartic_d2(&t.params, 1e-8)?.pull_back(&t)?;
            let n_reduc = coulomb_reduc_energy(beta, gamma, m).ok().map(|(_, n)| n);
            found.push(QuarticMatch {
                ordering: if swapped { "b,a" } else { "a,b" },
                s_plus: sp,
                s_minus: sm,
                beta,
                gamma,
                energy,
                principal: pp && pm,
                spectral_n: spectral_indices(energy, gamma, m),
                n_reduc,
                residual,
                params,
                form,
            });
        }
    }
    if found.is_empty() {
        return Err(Error::NotConverged(60));
    }
    Ok(found)
}

fn roots_principal(sp: C64, sm: C64) -> (bool, bool) {
    let is_principal = |s: C64| (s - (s * s).sqrt()).norm() <= 1e-9 * (1.0 + s.norm());
    (is_principal(sp), is_principal(sm))
}
