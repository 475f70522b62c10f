//! Resolution of a raw configuration into a typed scenario.

use crate::config::{parse_number, ConfigError, Entry, RawConfig, Unit};
use cavity_sense::{FreqConvention, MeasurementAngle, ProtocolConfig, ProtocolVariant, SystemParams};
use num_complex::Complex64;
use sha2::{Digest, Sha256};
use std::path::PathBuf;

pub const KNOWN_KEYS: &[&str] = &[
    "title",
    "kind",
    "n",
    "alpha",
    "chi",
    "g",
    "delta_c",
    "variant",
    "kappa",
    "kappa_ratio",
    "gamma",
    "freq_convention",
    "regime",
    "tau1",
    "tau2",
    "beta",
    "phi",
    "sigma_det",
    "sweep",
    "grid.start",
    "grid.stop",
    "grid.points",
    "grid.spacing",
    "output",
    "method",
    "objective",
    "model",
    "simulator.max_bytes",
    "wigner.times",
    "wigner.amplitudes",
    "wigner.half",
    "wigner.step",
    "dynamics.t_stop",
    "dynamics.points",
    "dynamics.n_max",
];

/// What a scenario computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Sensitivity,
    Qfi,
    Wigner,
    Optimize,
    Dynamics,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Sensitivity => "sensitivity",
            Kind::Qfi => "qfi",
            Kind::Wigner => "wigner",
            Kind::Optimize => "optimize",
            Kind::Dynamics => "dynamics",
        }
    }
}

/// Which decoherence formulas are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Ideal,
    Kappa,
    Gamma,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Ideal => "ideal",
            Regime::Kappa => "kappa",
            Regime::Gamma => "gamma",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// τ₁ = τ₂ = value (the state-generation time for QFI curves).
    Time,
    /// κ = χα√N/value, optimized over time at each point.
    KappaRatio,
    Phi,
    /// τ₂ = value with τ₁ fixed.
    Tau2,
    SigmaDet,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Time => "time",
            SweepAxis::KappaRatio => "kappa_ratio",
            SweepAxis::Phi => "phi",
            SweepAxis::Tau2 => "tau2",
            SweepAxis::SigmaDet => "sigma_det",
        }
    }
}

/// How sensitivity points are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Full moments of the regime, including the loss-induced signal rotation.
    Exact,
    /// Short-time formulas with detection noise, φ measured from the signal axis.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    return self.stop;
                }
                let u = i as f64 / last;
                match self.spacing {
                    Spacing::Lin => self.start + u * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + u * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSel {
    Eigendecomposition,
    GaussianAnalytic,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Gain,
    Qfi,
}

/// One Wigner panel.
#[derive(Debug, Clone, PartialEq)]
pub enum Panel {
    /// Bosonic cat of the scenario's N and α at χt = `chi_t`; `label` is χt√N.
    Cat { chi_t: f64, label: f64 },
    /// Explicit (weight, amplitude) list.
    Amplitudes(Vec<(Complex64, Complex64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerSpec {
    pub panels: Vec<Panel>,
    pub half: Option<f64>,
    pub step: f64,
}

/// Tavis-Cummings versus effective-model evolution from |−z⟩|α⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsSpec {
    pub t_stop: f64,
    pub points: usize,
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub title: Option<String>,
    pub kind: Kind,
    pub params: SystemParams,
    pub protocol: ProtocolConfig,
    pub regime: Regime,
    pub sweep: Option<SweepAxis>,
    pub grid: Option<Grid>,
    pub method: MethodSel,
    pub objective: Objective,
    pub model: Model,
    pub output: Option<PathBuf>,
    pub wigner: Option<WignerSpec>,
    pub dynamics: Option<DynamicsSpec>,
    pub max_bytes: u64,
    /// SHA-256 of the canonical configuration without the output path.
    pub hash: String,
}

struct Reader<'a> {
    raw: &'a RawConfig,
    freq: FreqConvention,
}

impl<'a> Reader<'a> {
    fn entry(&self, key: &str) -> Option<&'a Entry> {
        self.raw.get(key)
    }

    fn num(&self, key: &str, unit: Unit, sqrt_n: Option<f64>) -> Result<Option<f64>, ConfigError> {
        self.entry(key).map(|e| parse_number(e, unit, sqrt_n)).transpose()
    }

    fn rate(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        Ok(self.num(key, Unit::Rate, None)?.map(|v| self.freq.to_angular(v)))
    }

    fn word<T>(&self, key: &str, choices: &[(&str, T)]) -> Result<Option<T>, ConfigError>
    where
        T: Copy,
    {
        let Some(e) = self.entry(key) else { return Ok(None) };
        choices.iter().find(|(name, _)| *name == e.value).map(|&(_, v)| Some(v)).ok_or_else(|| {
            let names: Vec<&str> = choices.iter().map(|c| c.0).collect();
            ConfigError::at(&e.origin, format!("`{}` must be one of {}, got `{}`", key, names.join("|"), e.value))
        })
    }

    fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        let Some(e) = self.entry(key) else { return Ok(None) };
        let v = parse_number(e, Unit::None, None)?;
        if v < 0.0 || v.fract() != 0.0 || v > 1e15 {
            return Err(ConfigError::at(&e.origin, format!("`{key}` must be a non-negative integer, got `{}`", e.value)));
        }
        Ok(Some(v as usize))
    }

    fn require<T>(&self, key: &str, v: Option<T>) -> Result<T, ConfigError> {
        v.ok_or_else(|| ConfigError::global(format!("missing required key `{key}`")))
    }
}

fn invalid(raw: &RawConfig, key: &str, message: impl Into<String>) -> ConfigError {
    match raw.get(key) {
        Some(e) => ConfigError::at(&e.origin, message),
        None => ConfigError::global(message),
    }
}

fn positive(raw: &RawConfig, key: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(raw, key, format!("`{key}` must be > 0, got {v}")))
    }
}

impl Scenario {
    /// Resolves `raw`; `kind` overrides the `kind` key when given.
    pub fn from_raw(raw: &RawConfig, kind: Option<Kind>) -> Result<Self, ConfigError> {
        for k in raw.keys() {
            if !KNOWN_KEYS.contains(&k) {
                return Err(invalid(raw, k, format!("unknown key `{k}`")));
            }
        }
        let freq = Reader { raw, freq: FreqConvention::Rad }
            .word("freq_convention", &[("rad", FreqConvention::Rad), ("hz2pi", FreqConvention::Hz2Pi)])?
            .unwrap_or_default();
        let r = Reader { raw, freq };
        let kind = match kind {
            Some(k) => k,
            None => r
                .word(
                    "kind",
                    &[
                        ("sensitivity", Kind::Sensitivity),
                        ("qfi", Kind::Qfi),
                        ("wigner", Kind::Wigner),
                        ("optimize", Kind::Optimize),
                        ("dynamics", Kind::Dynamics),
                    ],
                )?
                .unwrap_or(Kind::Sensitivity),
        };

        let n_entry = r.entry("n").ok_or_else(|| ConfigError::global("missing required key `n`"))?;
        let n_f = parse_number(n_entry, Unit::None, None)?;
        if !(n_f >= 1.0) || n_f.fract() != 0.0 || n_f > 1e12 {
            return Err(ConfigError::at(&n_entry.origin, format!("`n` must be a positive integer, got `{}`", n_entry.value)));
        }
        let n = n_f as u64;
        let sqrt_n = n_f.sqrt();
        let alpha = r.require("alpha", r.num("alpha", Unit::None, Some(sqrt_n))?)?;
        if !(alpha >= 0.0) {
            return Err(invalid(raw, "alpha", "`alpha` must be >= 0"));
        }
        let variant = r
            .word("variant", &[("resonant", ProtocolVariant::Resonant), ("dispersive", ProtocolVariant::Dispersive)])?
            .unwrap_or(ProtocolVariant::Resonant);
        let chi = r.rate("chi")?;
        let g = r.rate("g")?;
        let delta_c = r.rate("delta_c")?.unwrap_or(0.0);
        let g = match (variant, chi, g) {
            (_, Some(_), Some(_)) => return Err(invalid(raw, "g", "set either `chi` or `g`, not both")),
            (_, None, None) => return Err(ConfigError::global("missing coupling: set `chi` or `g`")),
            (ProtocolVariant::Resonant, Some(c), None) => c * alpha,
            (ProtocolVariant::Dispersive, Some(c), None) => {
                if c * delta_c <= 0.0 {
                    return Err(invalid(raw, "delta_c", "dispersive `chi` needs `delta_c` of the same sign"));
                }
                (c * delta_c / 2.0).sqrt()
            }
            (_, None, Some(g)) => g,
        };
        let mut params = SystemParams::new(n, g, delta_c, 0.0, 0.0, alpha, variant).map_err(|e| ConfigError::global(e.to_string()))?;
        let chi = params.chi();
        let kappa = match (r.rate("kappa")?, r.num("kappa_ratio", Unit::None, None)?) {
            (Some(_), Some(_)) => return Err(invalid(raw, "kappa_ratio", "set either `kappa` or `kappa_ratio`, not both")),
            (Some(k), None) => k,
            (None, Some(ratio)) => chi * alpha * sqrt_n / positive(raw, "kappa_ratio", ratio)?,
            (None, None) => 0.0,
        };
        let gamma = r.rate("gamma")?.unwrap_or(0.0);
        params.kappa = kappa;
        params.gamma = gamma;
        params.validate().map_err(|e| ConfigError::global(e.to_string()))?;

        let regime =
            r.word("regime", &[("ideal", Regime::Ideal), ("kappa", Regime::Kappa), ("gamma", Regime::Gamma)])?.unwrap_or(if gamma > 0.0 {
                Regime::Gamma
            } else if kappa > 0.0 {
                Regime::Kappa
            } else {
                Regime::Ideal
            });
        if regime == Regime::Gamma && variant != ProtocolVariant::Resonant {
            return Err(invalid(raw, "regime", "the gamma regime is implemented for the resonant variant"));
        }

        let tau1 = r.num("tau1", Unit::Time, None)?.unwrap_or(0.0);
        let tau2 = r.num("tau2", Unit::Time, None)?.unwrap_or(tau1);
        let beta = r.num("beta", Unit::None, None)?.unwrap_or(0.0);
        let phi = match r.entry("phi") {
            None => MeasurementAngle::Fixed(std::f64::consts::FRAC_PI_2),
            Some(e) if e.value == "auto" => MeasurementAngle::Auto,
            Some(e) => MeasurementAngle::Fixed(parse_number(e, Unit::None, None)?),
        };
        let sigma_det = r.num("sigma_det", Unit::None, Some(sqrt_n))?.unwrap_or(0.0);
        let protocol = ProtocolConfig::new(tau1, tau2, beta, phi, sigma_det).map_err(|e| ConfigError::global(e.to_string()))?;

        let sweep = r.word(
            "sweep",
            &[
                ("time", SweepAxis::Time),
                ("kappa_ratio", SweepAxis::KappaRatio),
                ("phi", SweepAxis::Phi),
                ("tau2", SweepAxis::Tau2),
                ("sigma_det", SweepAxis::SigmaDet),
            ],
        )?;
        let grid_unit = match sweep {
            Some(SweepAxis::Time | SweepAxis::Tau2) => Unit::Time,
            _ => Unit::None,
        };
        let grid_sqrt = (sweep == Some(SweepAxis::SigmaDet)).then_some(sqrt_n);
        let start = r.num("grid.start", grid_unit, grid_sqrt)?;
        let stop = r.num("grid.stop", grid_unit, grid_sqrt)?;
        let points = r.count("grid.points")?;
        let spacing = r.word("grid.spacing", &[("lin", Spacing::Lin), ("log", Spacing::Log)])?.unwrap_or(Spacing::Lin);
        let grid = match (start, stop, points) {
            (None, None, None) => None,
            (Some(start), Some(stop), Some(points)) => {
                if points < 2 {
                    return Err(invalid(raw, "grid.points", format!("grid needs at least 2 points, got {points}")));
                }
                if !(stop > start) {
                    return Err(invalid(raw, "grid.stop", "grid must be increasing: `grid.stop` > `grid.start`"));
                }
                if spacing == Spacing::Log && !(start > 0.0) {
                    return Err(invalid(raw, "grid.start", "log spacing needs `grid.start` > 0"));
                }
                Some(Grid { start, stop, points, spacing })
            }
            _ => return Err(ConfigError::global("grid needs all of `grid.start`, `grid.stop`, `grid.points`")),
        };

        let method = r
            .word(
                "method",
                &[
                    ("eigendecomposition", MethodSel::Eigendecomposition),
                    ("gaussian_analytic", MethodSel::GaussianAnalytic),
                    ("both", MethodSel::Both),
                ],
            )?
            .unwrap_or(MethodSel::GaussianAnalytic);
        let objective = r.word("objective", &[("gain", Objective::Gain), ("qfi", Objective::Qfi)])?.unwrap_or(Objective::Gain);
        let model = r.word("model", &[("exact", Model::Exact), ("closed_form", Model::ClosedForm)])?.unwrap_or(Model::Exact);
        let output = r.entry("output").map(|e| PathBuf::from(&e.value));
        let max_bytes = match r.num("simulator.max_bytes", Unit::None, None)? {
            Some(b) => positive(raw, "simulator.max_bytes", b)? as u64,
            None => cavity_sense::simulator::DEFAULT_MAX_BYTES,
        };

        let wigner = if kind == Kind::Wigner { Some(wigner_spec(&r, sqrt_n)?) } else { None };
        let dynamics = if kind == Kind::Dynamics {
            Some(DynamicsSpec {
                t_stop: positive(raw, "dynamics.t_stop", r.require("dynamics.t_stop", r.num("dynamics.t_stop", Unit::Time, None)?)?)?,
                points: r.count("dynamics.points")?.unwrap_or(400).max(2),
                n_max: r.count("dynamics.n_max")?,
            })
        } else {
            None
        };

        let s = Scenario {
            title: r.entry("title").map(|e| e.value.clone()),
            kind,
            params,
            protocol,
            regime,
            sweep,
            grid,
            method,
            objective,
            model,
            output,
            wigner,
            dynamics,
            max_bytes,
            hash: scenario_hash(raw, kind),
        };
        s.check_kind(raw)?;
        Ok(s)
    }

    fn check_kind(&self, raw: &RawConfig) -> Result<(), ConfigError> {
        let needs_grid = matches!(self.kind, Kind::Sensitivity | Kind::Qfi);
        if needs_grid {
            let Some(sweep) = self.sweep else {
                return Err(ConfigError::global(format!("`{}` needs a `sweep` axis", self.kind.name())));
            };
            if self.grid.is_none() {
                return Err(ConfigError::global("sweep needs `grid.start`, `grid.stop` and `grid.points`"));
            }
            let allowed: &[SweepAxis] = match self.kind {
                Kind::Qfi => &[SweepAxis::Time, SweepAxis::KappaRatio],
                _ => &[SweepAxis::Time, SweepAxis::KappaRatio, SweepAxis::Phi, SweepAxis::Tau2, SweepAxis::SigmaDet],
            };
            if !allowed.contains(&sweep) {
                return Err(invalid(raw, "sweep", format!("`{}` cannot sweep `{}`", self.kind.name(), sweep.name())));
            }
            if sweep == SweepAxis::KappaRatio && self.regime != Regime::Kappa {
                return Err(invalid(raw, "sweep", "`kappa_ratio` sweeps need the kappa regime"));
            }
            if sweep == SweepAxis::Tau2 && self.regime == Regime::Gamma {
                return Err(invalid(raw, "sweep", "the gamma regime has no asymmetric schedule"));
            }
            if matches!(sweep, SweepAxis::Phi | SweepAxis::Tau2 | SweepAxis::SigmaDet) && !(self.protocol.tau1 > 0.0) {
                return Err(invalid(raw, "tau1", format!("sweeping `{}` needs `tau1` > 0", sweep.name())));
            }
        } else if self.sweep.is_some() && self.kind != Kind::Optimize {
            return Err(invalid(raw, "sweep", format!("`{}` takes no sweep", self.kind.name())));
        }
        if self.model == Model::ClosedForm {
            if self.kind != Kind::Sensitivity || matches!(self.sweep, Some(SweepAxis::KappaRatio | SweepAxis::Tau2)) {
                return Err(invalid(raw, "model", "`closed_form` evaluates time, phi and sigma_det sensitivity sweeps"));
            }
            if self.protocol.phi == MeasurementAngle::Auto {
                return Err(invalid(raw, "phi", "`closed_form` needs an explicit `phi`"));
            }
            if self.protocol.tau1 != self.protocol.tau2 {
                return Err(invalid(raw, "tau2", "`closed_form` needs `tau2` = `tau1`"));
            }
        }
        if self.kind == Kind::Qfi && self.regime == Regime::Gamma {
            return Err(invalid(raw, "regime", "no QFI formula exists for the gamma regime"));
        }
        if self.kind == Kind::Optimize && self.objective == Objective::Qfi && self.regime == Regime::Gamma {
            return Err(invalid(raw, "objective", "no QFI formula exists for the gamma regime"));
        }
        Ok(())
    }

    /// Label used in output headers.
    pub fn header(&self) -> String {
        format!("# cavity-sense v{}, scenario {}", env!("CARGO_PKG_VERSION"), self.hash)
    }
}

pub fn scenario_hash(raw: &RawConfig, kind: Kind) -> String {
    let mut h = Sha256::new();
    h.update(format!("kind = {}\n", kind.name()).as_bytes());
    h.update(raw.canonical(&["output", "kind"]).as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn wigner_spec(r: &Reader<'_>, sqrt_n: f64) -> Result<WignerSpec, ConfigError> {
    let mut panels = Vec::new();
    if let Some(e) = r.entry("wigner.times") {
        for part in e.value.split(',') {
            let sub = Entry { value: part.trim().to_string(), origin: e.origin.clone() };
            let x = parse_number(&sub, Unit::None, None)?;
            if !(x >= 0.0) {
                return Err(ConfigError::at(&e.origin, "`wigner.times` entries must be >= 0"));
            }
            // times are given in units of 1/(χ√N)
            panels.push(Panel::Cat { chi_t: x / sqrt_n, label: x });
        }
    }
    if let Some(e) = r.entry("wigner.amplitudes") {
        let mut comps = Vec::new();
        for part in e.value.split(';') {
            let nums: Vec<f64> = part
                .split_whitespace()
                .map(|t| parse_number(&Entry { value: t.to_string(), origin: e.origin.clone() }, Unit::None, None))
                .collect::<Result<_, _>>()?;
            if nums.len() != 4 {
                return Err(ConfigError::at(&e.origin, "each amplitude is `w_re w_im b_re b_im`, separated by `;`"));
            }
            comps.push((Complex64::new(nums[0], nums[1]), Complex64::new(nums[2], nums[3])));
        }
        panels.push(Panel::Amplitudes(comps));
    }
    if panels.is_empty() {
        return Err(ConfigError::global("wigner needs `wigner.times` or `wigner.amplitudes`"));
    }
    let step = r.num("wigner.step", Unit::None, None)?.unwrap_or(0.05);
    if !(step > 0.0) {
        return Err(invalid(r.raw, "wigner.step", "`wigner.step` must be > 0"));
    }
    let half = r.num("wigner.half", Unit::None, None)?;
    Ok(WignerSpec { panels, half, step })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(text: &str) -> Result<Scenario, ConfigError> {
        Scenario::from_raw(&RawConfig::parse(text, "t").unwrap(), None)
    }

    #[test]
    fn resolves_physical_units() {
        let s = scenario(
            "n = 1e6\nalpha = 1e4\ng = 11 kHz\nkappa = 150 kHz\nfreq_convention = hz2pi\ntau1 = 85 ns\nsweep = tau2\n\
             grid.start = 40 ns\ngrid.stop = 200 ns\ngrid.points = 5\n",
        )
        .unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert_eq!(s.params.n, 1_000_000);
        assert!((s.params.g - two_pi * 11e3).abs() < 1e-6);
        assert!((s.params.kappa - two_pi * 150e3).abs() < 1e-6);
        assert_eq!(s.regime, Regime::Kappa);
        assert!((s.protocol.tau2 - 85e-9).abs() < 1e-20);
        assert_eq!(s.grid.unwrap().values().len(), 5);
    }

    #[test]
    fn kappa_ratio_and_sqrt_n() {
        let s = scenario("n = 1000\nalpha = 100 sqrtN\nchi = 1\nkappa_ratio = 73\nkind = qfi\nsweep = time\ngrid.start = 1e-6\ngrid.stop = 1e-4\ngrid.points = 3\ngrid.spacing = log\n").unwrap();
        let sqrt_n = 1000f64.sqrt();
        assert!((s.params.alpha - 100.0 * sqrt_n).abs() < 1e-9);
        assert!((s.params.chi() * s.params.alpha * sqrt_n / s.params.kappa - 73.0).abs() < 1e-9);
        let v = s.grid.unwrap().values();
        assert!((v[1] - 1e-5).abs() < 1e-18 && v[2] == 1e-4);
    }

    #[test]
    fn config_errors() {
        let base = "n = 10\nalpha = 4\nchi = 1\nsweep = time\ngrid.start = 0\ngrid.stop = 1\n";
        let e = scenario(&format!("{base}grid.points = 0\n")).unwrap_err();
        assert!(e.message.contains("at least 2"));
        assert!(matches!(e.origin, crate::config::Origin::File { line: 7, .. }));
        assert!(scenario(&format!("{base}grid.points = 1\n")).is_err());
        assert!(scenario("n = 10\nalpha = 4\nchi = 1\nsweep = time\ngrid.start = 1\ngrid.stop = 0\ngrid.points = 3\n").is_err());
        assert!(scenario(&format!("{base}grid.points = 3\nbogus = 1\n")).unwrap_err().message.contains("unknown key"));
        assert!(scenario("n = 10\nalpha = 4\nchi = 1\n").unwrap_err().message.contains("sweep"));
        assert!(scenario("n = 0\nalpha = 4\nchi = 1\n").is_err());
        assert!(scenario(&format!("{base}grid.points = 3\nchi_typo = 2\n")).is_err());
    }

    #[test]
    fn hash_ignores_output_and_order() {
        let a = RawConfig::parse("n = 10\nalpha = 4\nchi = 1\noutput = a.csv\n", "a").unwrap();
        let b = RawConfig::parse("chi = 1\nalpha = 4\nn = 10\noutput = b.csv\n", "b").unwrap();
        assert_eq!(scenario_hash(&a, Kind::Qfi), scenario_hash(&b, Kind::Qfi));
        assert_ne!(scenario_hash(&a, Kind::Qfi), scenario_hash(&a, Kind::Sensitivity));
    }
}
