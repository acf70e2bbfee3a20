//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each exported function has a plain Rust twin returning `Result<_, String>`
//! so the logic is testable off the browser.

use std::f64::consts::PI;

use gluedwalk::line::{quantization_lhs, quantization_roots, transmission_probability, StateKind};
use gluedwalk::walk::exit_probability_curve;
use wasm_bindgen::prelude::*;

/// Depths above this make the page sluggish.
pub const MAX_N: u32 = 400;
pub const MAX_SAMPLES: usize = 20_000;

fn check(n: u32, samples: usize) -> Result<(), String> {
    if n == 0 || n > MAX_N {
        return Err(format!("n must be in 1..={MAX_N}"));
    }
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must be in 2..={MAX_SAMPLES}"));
    }
    Ok(())
}

/// Exit probabilities at `t_max * i / (samples - 1)`.
pub fn exit_curve_values(n: u32, t_max: f64, samples: usize) -> Result<Vec<f64>, String> {
    check(n, samples)?;
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err("t_max must be positive".into());
    }
    let times: Vec<f64> = (0..samples)
        .map(|i| t_max * i as f64 / (samples - 1) as f64)
        .collect();
    exit_probability_curve(n, &times).map_err(|e| e.to_string())
}

/// `|T(p)|^2` at `p = pi * (i + 1) / (samples + 1)`.
pub fn transmission_values(alpha: f64, samples: usize) -> Result<Vec<f64>, String> {
    check(1, samples)?;
    (0..samples)
        .map(|i| {
            transmission_probability(PI * (i + 1) as f64 / (samples + 1) as f64, alpha)
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// Energies of the reduced chain, ascending, followed by the number of
/// bound states as the last entry.
pub fn spectrum_values(n: u32) -> Result<Vec<f64>, String> {
    check(n, 2)?;
    let r = quantization_roots(n).map_err(|e| e.to_string())?;
    let bound = r
        .states
        .iter()
        .filter(|s| matches!(s.kind, StateKind::Bound { .. }))
        .count();
    let mut out = r.energies();
    out.push(bound as f64);
    Ok(out)
}

/// `sin((n+1)p) / sin(np)` at `p = pi * (i + 0.5) / samples`; NaN near poles
/// so the plot breaks there.
pub fn quantization_values(n: u32, samples: usize) -> Result<Vec<f64>, String> {
    check(n, samples)?;
    Ok((0..samples)
        .map(|i| {
            let p = PI * (i as f64 + 0.5) / samples as f64;
            let y = quantization_lhs(n, p);
            if y.abs() > 1e3 {
                f64::NAN
            } else {
                y
            }
        })
        .collect())
}

#[wasm_bindgen]
pub fn exit_curve(n: u32, t_max: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    exit_curve_values(n, t_max, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn transmission_curve(alpha: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    transmission_values(alpha, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn spectrum(n: u32) -> Result<Vec<f64>, JsError> {
    spectrum_values(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn quantization_curve(n: u32, samples: usize) -> Result<Vec<f64>, JsError> {
    quantization_values(n, samples).map_err(|e| JsError::new(&e))
}
