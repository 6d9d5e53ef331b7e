use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The five figure setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Rotation worst case, `N = 100`, `λ = 1`.
    Fig1,
    /// Strongly monotone toy, `N = 100`, `λ = 1`, `μ = 0.02`.
    Fig2,
    /// Basis pursuit by the proximal method of multipliers.
    Fig3,
    /// Bilinear game by PDHG.
    Fig4,
    /// Total-variation least squares by ADMM.
    Fig5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scale {
    #[default]
    Full,
    /// Smaller dimensions for CI.
    Desk,
}

/// Default parameters of a preset. Unused fields are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetParams {
    pub iters: usize,
    pub n: Option<usize>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub rho: Option<f64>,
    /// `None` for PDHG means `0.99/‖K‖`.
    pub tau: Option<f64>,
    pub sigma: Option<f64>,
    pub gamma: Option<f64>,
    pub d1: Option<usize>,
    pub d2: Option<usize>,
    pub p: Option<usize>,
    pub seed: Option<u64>,
    /// Initial value of every coordinate.
    pub init: f64,
    /// Restart intervals shown in the figure.
    pub restarts: Vec<usize>,
    /// Method names as accepted by the CLI.
    pub methods: Vec<String>,
}

impl PresetParams {
    fn base(iters: usize) -> Self {
        PresetParams {
            iters,
            n: None,
            lambda: None,
            mu: None,
            rho: None,
            tau: None,
            sigma: None,
            gamma: None,
            d1: None,
            d2: None,
            p: None,
            seed: None,
            init: 0.0,
            restarts: Vec::new(),
            methods: Vec::new(),
        }
    }
}

pub const DEFAULT_SEED: u64 = 1;

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Fig1, Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    pub fn params(self, scale: Scale) -> PresetParams {
        let desk = scale == Scale::Desk;
        let methods = |names: &[&str]| names.iter().map(|s| s.to_string()).collect();
        match self {
            Preset::Fig1 => PresetParams {
                n: Some(100),
                lambda: Some(1.0),
                methods: methods(&["ppm", "guler1", "accel"]),
                ..PresetParams::base(100)
            },
            Preset::Fig2 => PresetParams {
                n: Some(100),
                lambda: Some(1.0),
                mu: Some(0.02),
                restarts: vec![17, 34, 68, 136],
                methods: methods(&[
                    "ppm",
                    "guler1",
                    "accel",
                    "restarted@17",
                    "restarted@34",
                    "restarted@68",
                    "restarted@136",
                ]),
                ..PresetParams::base(200)
            },
            Preset::Fig3 => PresetParams {
                lambda: Some(0.01),
                d1: Some(if desk { 50 } else { 100 }),
                d2: Some(if desk { 10 } else { 20 }),
                seed: Some(DEFAULT_SEED),
                restarts: vec![30],
                methods: methods(&["ppm", "guler1", "accel", "restarted@30"]),
                ..PresetParams::base(100)
            },
            Preset::Fig4 => PresetParams {
                d1: Some(if desk { 50 } else { 1000 }),
                d2: Some(if desk { 25 } else { 500 }),
                seed: Some(DEFAULT_SEED),
                init: 10.0,
                restarts: vec![10],
                methods: methods(&["ppm", "guler1", "accel", "restarted@10"]),
                ..PresetParams::base(100)
            },
            Preset::Fig5 => PresetParams {
                rho: Some(0.05),
                gamma: Some(3.0),
                d1: Some(if desk { 40 } else { 100 }),
                p: Some(5),
                seed: Some(DEFAULT_SEED),
                restarts: vec![20],
                methods: methods(&["ppm", "guler1", "accel", "restarted@20"]),
                ..PresetParams::base(100)
            },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown preset '{s}'")))
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Scale::Full),
            "desk" => Ok(Scale::Desk),
            _ => Err(Error::InvalidParameter(format!("unknown scale '{s}' (expected full or desk)"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_scale_dimensions() {
        let p = Preset::Fig3.params(Scale::Full);
        assert_eq!((p.d1, p.d2, p.lambda, p.iters), (Some(100), Some(20), Some(0.01), 100));
        let p = Preset::Fig4.params(Scale::Full);
        assert_eq!((p.d1, p.d2, p.init), (Some(1000), Some(500), 10.0));
        let p = Preset::Fig5.params(Scale::Full);
        assert_eq!((p.d1, p.p, p.gamma, p.rho), (Some(100), Some(5), Some(3.0), Some(0.05)));
        assert_eq!(Preset::Fig2.params(Scale::Full).restarts, vec![17, 34, 68, 136]);
    }

    #[test]
    fn names_parse() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("fig6".parse::<Preset>().is_err());
        assert_eq!("desk".parse::<Scale>().unwrap(), Scale::Desk);
    }
}
