//! Calibrated specs for every group in scope and each maximal parabolic.
//!
//! The JSON files under `presets/` are the output of `rankzeta zeta calibrate`.

use crate::error::{Error, Result};
use crate::periods::{parabolic_name, ZetaSpec};
use crate::rootdata::CartanType;

const FILES: &[(&str, &str)] = &[
    ("A1-P11", include_str!("../presets/A1-P11.json")),
    ("A2-P12", include_str!("../presets/A2-P12.json")),
    ("A2-P21", include_str!("../presets/A2-P21.json")),
    ("A3-P13", include_str!("../presets/A3-P13.json")),
    ("A3-P22", include_str!("../presets/A3-P22.json")),
    ("A3-P31", include_str!("../presets/A3-P31.json")),
    ("A4-P14", include_str!("../presets/A4-P14.json")),
    ("A4-P23", include_str!("../presets/A4-P23.json")),
    ("A4-P32", include_str!("../presets/A4-P32.json")),
    ("A4-P41", include_str!("../presets/A4-P41.json")),
    ("C2-short", include_str!("../presets/C2-short.json")),
    ("C2-long", include_str!("../presets/C2-long.json")),
    ("G2-short", include_str!("../presets/G2-short.json")),
    ("G2-long", include_str!("../presets/G2-long.json")),
];

pub fn preset_key(group: CartanType, alpha_p: usize) -> String {
    format!("{group}-{}", parabolic_name(group, alpha_p))
}

/// The shipped JSON text for a preset.
pub fn preset_json(group: CartanType, alpha_p: usize) -> Result<&'static str> {
    let key = preset_key(group, alpha_p);
    FILES
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Config(format!("no preset for {key}")))
}

pub fn preset(group: CartanType, alpha_p: usize) -> Result<ZetaSpec> {
    ZetaSpec::from_json(preset_json(group, alpha_p)?)
}

/// All presets in shipping order.
pub fn all_presets() -> Vec<ZetaSpec> {
    FILES
        .iter()
        .map(|(k, v)| ZetaSpec::from_json(v).unwrap_or_else(|e| panic!("preset {k}: {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::{calibrate_spec, CalibrationOptions};

    #[test]
    fn every_maximal_parabolic_has_a_preset() {
        for g in CartanType::ALL {
            for p in 0..g.rank() {
                let spec = preset(g, p).unwrap();
                assert_eq!((spec.group, spec.alpha_p), (g, p));
            }
        }
        assert_eq!(all_presets().len(), FILES.len());
    }

    #[test]
    fn presets_reproduce_from_calibration() {
        for (g, p) in [(CartanType::A1, 0), (CartanType::A2, 1), (CartanType::G2, 0)] {
            let (spec, _) = calibrate_spec(&ZetaSpec::new(g, p).unwrap(), &CalibrationOptions::default()).unwrap();
            assert_eq!(spec.to_json() + "\n", preset_json(g, p).unwrap());
        }
    }
}
