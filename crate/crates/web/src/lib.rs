//! Browser demo bindings. Every export returns a JSON string so the page can
//! stay plain JavaScript.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use rankzeta::eisenstein::{truncated_integral_closed, truncated_integral_geo};
use rankzeta::lattice::{degree, h0, hn_polygon, is_semistable, rr_defect, LatticeBasis, H0_TOL};
use rankzeta::periods::{parse_parabolic, ZetaFunction};
use rankzeta::presets::preset;
use rankzeta::rootdata::CartanType;
use rankzeta::specfun::c;
use rankzeta::{Error, Result};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

fn bad(msg: &str) -> Error {
    Error::Config(msg.into())
}

/// `ξ^{G/P}(1/2 + it)` on `n` equally spaced `t ∈ [t_min, t_max]`, for the
/// rank ≤ 2 groups (the others are too slow for an interactive page).
#[wasm_bindgen]
pub fn critical_line(group: &str, parabolic: &str, t_min: f64, t_max: f64, n: usize) -> std::result::Result<String, JsError> {
    critical_line_json(group, parabolic, t_min, t_max, n).map_err(js)
}

fn critical_line_json(group: &str, parabolic: &str, t_min: f64, t_max: f64, n: usize) -> Result<String> {
    let g: CartanType = group.parse()?;
    if g.rank() > 2 {
        return Err(bad("the demo evaluates rank ≤ 2 groups only"));
    }
    if !(t_max > t_min) || !(2..=4000).contains(&n) {
        return Err(bad("need t_min < t_max and 2 ≤ n ≤ 4000"));
    }
    let alpha_p = if g.rank() == 1 { 0 } else { parse_parabolic(g, parabolic)? };
    let zf = ZetaFunction::new(preset(g, alpha_p)?)?;
    let mut t = Vec::with_capacity(n);
    let mut re = Vec::with_capacity(n);
    let mut im = Vec::with_capacity(n);
    for k in 0..n {
        let tk = t_min + (t_max - t_min) * k as f64 / (n - 1) as f64;
        let v = zf.eval(c(0.5, tk))?;
        t.push(tk);
        re.push(v.re);
        im.push(v.im);
    }
    // sign changes of the (real) values bracket the zeros
    let zeros: Vec<f64> = (1..n)
        .filter(|&k| re[k - 1].signum() != re[k].signum())
        .map(|k| t[k - 1] - re[k - 1] * (t[k] - t[k - 1]) / (re[k] - re[k - 1]))
        .collect();
    Ok(json!({ "t": t, "re": re, "im": im, "zeros": zeros }).to_string())
}

/// Invariants and stability verdicts of the lattice spanned by `(a, b)`, `(c, d)`.
#[wasm_bindgen]
pub fn classify_lattice(a: f64, b: f64, c: f64, d: f64) -> std::result::Result<String, JsError> {
    classify_lattice_json(a, b, c, d).map_err(js)
}

fn classify_lattice_json(a: f64, b: f64, c: f64, d: f64) -> Result<String> {
    let basis = LatticeBasis::new([a, b], [c, d])?;
    let verdict = is_semistable(&basis.normalized())?;
    Ok(json!({
        "degree": degree(&basis),
        "h0": h0(&basis, H0_TOL),
        "rr_defect": rr_defect(&basis),
        "hn_polygon": hn_polygon(&basis).points,
        "verdict": verdict,
    })
    .to_string())
}

/// The truncated integral `I_T(s)` in closed form on a `T` grid, plus the
/// geometric quadrature at a few of the grid points.
#[wasm_bindgen]
pub fn truncation_curve(s_re: f64, s_im: f64, t_max: f64, n: usize, checks: usize) -> std::result::Result<String, JsError> {
    truncation_curve_json(s_re, s_im, t_max, n, checks).map_err(js)
}

fn truncation_curve_json(s_re: f64, s_im: f64, t_max: f64, n: usize, checks: usize) -> Result<String> {
    if !(t_max > 1.0) || !(2..=2000).contains(&n) || checks > 8 {
        return Err(bad("need T_max > 1, 2 ≤ n ≤ 2000, at most 8 quadrature checks"));
    }
    let s = c(s_re, s_im);
    let ts: Vec<f64> = (0..n).map(|k| 1.0 + (t_max - 1.0) * k as f64 / (n - 1) as f64).collect();
    let closed = ts
        .iter()
        .map(|&t| truncated_integral_closed(s, t).map(|v| [v.re, v.im]))
        .collect::<Result<Vec<_>>>()?;
    let mut geometric = Vec::new();
    for k in 0..checks {
        let t = 1.0 + (t_max - 1.0) * k as f64 / (checks.max(2) - 1) as f64;
        let q = truncated_integral_geo(s, t, 1e-7)?;
        geometric.push(json!({ "T": t, "value": [q.value.re, q.value.im], "error_estimate": q.error_estimate }));
    }
    Ok(json!({ "T": ts, "closed": closed, "geometric": geometric }).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_return_json() {
        let v: serde_json::Value = serde_json::from_str(&critical_line_json("SL2", "", 0.1, 30.0, 1500).unwrap()).unwrap();
        // ξ_{Q,2} has 13 zeros with 0 < Im σ < 30
        let zeros = v["zeros"].as_array().unwrap();
        assert_eq!(zeros.len(), 13);
        let v: serde_json::Value = serde_json::from_str(&classify_lattice_json(1.0, 0.0, 0.3, 1.0).unwrap()).unwrap();
        assert_eq!(v["verdict"]["hn_route"], true);
        assert!(v["rr_defect"].as_f64().unwrap().abs() < 1e-12);
        let v: serde_json::Value = serde_json::from_str(&truncation_curve_json(2.0, 0.0, 3.0, 5, 2).unwrap()).unwrap();
        let last = &v["geometric"][1]["value"][0];
        let closed = &v["closed"][4][0];
        assert!((last.as_f64().unwrap() - closed.as_f64().unwrap()).abs() < 1e-6);
    }
}
