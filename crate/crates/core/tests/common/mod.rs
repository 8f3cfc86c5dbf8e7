#![allow(dead_code)]

use heun_core::scalar::{c64, real};
use heun_core::{make_params, HeunParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex(rng: &mut impl Rng, scale: f64) -> C64 {
    c64(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Γ kept a unit away from the non-positive integers so the series exists.
pub fn gamma(rng: &mut impl Rng) -> C64 {
    loop {
        let g = complex(rng, 2.5);
        if (0..=4).all(|k| (g + k as f64).norm() > 0.3) {
            return g;
        }
    }
}

/// `d` at distance ≥ 0.25 from both 0 and 1, with `|d| ≤ 4`.
pub fn d_value(rng: &mut impl Rng) -> C64 {
    loop {
        let d = complex(rng, 4.0);
        if d.norm() > 0.25 && (d - 1.0).norm() > 0.25 && d.norm() <= 4.0 {
            return d;
        }
    }
}

pub fn params_with_d(rng: &mut impl Rng, d: C64) -> HeunParams {
    make_params(d, complex(rng, 2.0), complex(rng, 2.0), complex(rng, 2.0), gamma(rng), complex(rng, 2.0)).unwrap()
}

pub fn random_params(rng: &mut impl Rng) -> HeunParams {
    let d = d_value(rng);
    params_with_d(rng, d)
}

pub fn real_params(rng: &mut impl Rng) -> HeunParams {
    let d = loop {
        let d = rng.gen_range(-4.0..4.0f64);
        if d.abs() > 0.25 && (d - 1.0).abs() > 0.25 {
            break d;
        }
    };
    let g = loop {
        let g: f64 = rng.gen_range(-2.5..2.5);
        if (0..=3).all(|k| (g + k as f64).abs() > 0.3) {
            break g;
        }
    };
    let mut r = || real(rng.gen_range(-2.0..2.0));
    make_params(real(d), r(), r(), r(), real(g), r()).unwrap()
}

pub fn rel(x: C64, y: C64) -> f64 {
    (x - y).norm() / x.norm().max(1.0)
}
