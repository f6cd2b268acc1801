//! Run configuration: JSON schema, path resolution and validation.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sers_core::{Complex64, Drude, FieldConfig, Geometry, MolecularModel, ParticleModel, Vec3, Vec3C, VibrationalMode};
use sers_dda::VoxelLattice;
use sers_greens::{Flavor, RamanChannel, SelfEnergyForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Classical,
    QuantumRpa,
    QuantumDda,
    SelfEnergy,
    DdaSolve,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Classical => "classical",
            Mode::QuantumRpa => "quantum-rpa",
            Mode::QuantumDda => "quantum-dda",
            Mode::SelfEnergy => "self-energy",
            Mode::DdaSolve => "dda-solve",
        }
    }

    fn needs_modes(self) -> bool {
        matches!(self, Mode::Classical | Mode::QuantumRpa | Mode::QuantumDda)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mode: Option<Mode>,
    pub inputs: Inputs,
    /// Molecule → particle centre (bohr), for the analytic particle.
    #[serde(default)]
    pub separation: Option<[f64; 3]>,
    pub sweep: Sweep,
    #[serde(default)]
    pub stokes: Stokes,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default)]
    pub channel: ChannelSpec,
    #[serde(default)]
    pub numeric: Numeric,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    #[serde(default)]
    pub molecule: Option<PathBuf>,
    #[serde(default)]
    pub particle: Option<PathBuf>,
    #[serde(default)]
    pub modes: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
}

impl Sweep {
    pub fn grid(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.omega_min];
        }
        let step = (self.omega_max - self.omega_min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.omega_min + i as f64 * step).collect()
    }
}

/// ω_k′ = ω_k ∓ ω_J. ω_J comes from `omega_j` when given, otherwise from
/// mode `mode` (default 0); with neither and no modes, ω_k′ = ω_k.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stokes {
    #[serde(default)]
    pub mode: Option<usize>,
    #[serde(default)]
    pub omega_j: Option<f64>,
    #[serde(default)]
    pub anti_stokes: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default = "x_axis")]
    pub pol_in: [f64; 3],
    #[serde(default = "x_axis")]
    pub pol_out: [f64; 3],
    #[serde(default)]
    pub photon_occupancy: u32,
}

fn x_axis() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self { pol_in: x_axis(), pol_out: x_axis(), photon_occupancy: 0 }
    }
}

/// Raman channel |q,ν⟩ → |p,ν′⟩; `q` defaults to the highest hole and `p` to `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(default)]
    pub q: Option<usize>,
    #[serde(default)]
    pub p: Option<usize>,
    #[serde(default)]
    pub nu: u32,
    #[serde(default = "one")]
    pub nu_prime: u32,
    #[serde(default)]
    pub intermediates: Option<Vec<usize>>,
}

fn one() -> u32 {
    1
}

impl Default for ChannelSpec {
    fn default() -> Self {
        Self { q: None, p: None, nu: 0, nu_prime: 1, intermediates: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlavorSpec {
    Retarded,
    TimeOrdered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormSpec {
    Simplified,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numeric {
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_mixing")]
    pub mixing: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_threshold")]
    pub solver_threshold: usize,
    #[serde(default = "default_flavor")]
    pub flavor: FlavorSpec,
    #[serde(default = "default_form")]
    pub form: FormSpec,
    /// Radiative reaction correction on voxel polarizabilities.
    #[serde(default = "default_radiative")]
    pub radiative: bool,
}

fn default_eta() -> f64 {
    sers_core::units::DEFAULT_ETA
}
fn default_mixing() -> f64 {
    0.5
}
fn default_tol() -> f64 {
    1e-8
}
fn default_max_iter() -> usize {
    100
}
fn default_threshold() -> usize {
    2000
}
fn default_flavor() -> FlavorSpec {
    FlavorSpec::Retarded
}
fn default_form() -> FormSpec {
    FormSpec::Simplified
}
fn default_radiative() -> bool {
    true
}

impl Default for Numeric {
    fn default() -> Self {
        Self {
            eta: default_eta(),
            mixing: default_mixing(),
            tol: default_tol(),
            max_iter: default_max_iter(),
            solver_threshold: default_threshold(),
            flavor: default_flavor(),
            form: default_form(),
            radiative: default_radiative(),
        }
    }
}

impl Numeric {
    pub fn flavor(&self) -> Flavor {
        match self.flavor {
            FlavorSpec::Retarded => Flavor::Retarded,
            FlavorSpec::TimeOrdered => Flavor::TimeOrdered,
        }
    }

    pub fn form(&self) -> SelfEnergyForm {
        match self.form {
            FormSpec::Simplified => SelfEnergyForm::Simplified,
            FormSpec::Exact => SelfEnergyForm::ExactDoubleContraction,
        }
    }
}

/// One problem found in a configuration or a file it references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self { location: location.into(), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl RunConfig {
    /// Reads a config file; relative input and output paths are resolved
    /// against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, Diagnostic> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Diagnostic::new(path.display().to_string(), format!("cannot read config: {e}")))?;
        let mut config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Diagnostic::new(path.display().to_string(), format!("cannot parse config: {e}")))?;
        config.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(config)
    }

    pub fn resolve_paths(&mut self, dir: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        self.inputs.molecule.iter_mut().for_each(join);
        self.inputs.particle.iter_mut().for_each(join);
        self.inputs.modes.iter_mut().for_each(join);
        self.output.iter_mut().for_each(join);
    }
}

/// Particle as used by a run.
#[derive(Debug, Clone)]
pub enum Particle {
    None,
    Analytic { drude: Drude, geometry: Geometry },
    Lattice(VoxelLattice),
}

/// Everything a run needs, loaded and checked.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub mode: Mode,
    pub model: Option<MolecularModel>,
    pub particle: Particle,
    /// Separation for the analytic self-energy, if any.
    pub geometry: Option<Geometry>,
    /// Modes entering the Raman sums.
    pub modes: Vec<VibrationalMode>,
    pub channel: Option<RamanChannel>,
    pub omega_j: f64,
    pub anti_stokes: bool,
    pub grid: Vec<f64>,
    pub pol_in: Vec3C,
    pub pol_out: Vec3C,
    pub photon_occupancy: u32,
    pub numeric: Numeric,
}

impl Prepared {
    pub fn omega_kp(&self, omega_k: f64) -> f64 {
        if self.anti_stokes {
            omega_k + self.omega_j
        } else {
            omega_k - self.omega_j
        }
    }

    pub fn field(&self, omega_k: f64, omega_kp: f64) -> sers_core::Result<FieldConfig> {
        FieldConfig::new(omega_k, omega_kp, self.pol_in, self.pol_out)?
            .with_occupancy(self.photon_occupancy)
            .with_eta(self.numeric.eta)
    }
}

fn real_vec(v: [f64; 3]) -> Vec3C {
    Vec3C::new(Complex64::new(v[0], 0.0), Complex64::new(v[1], 0.0), Complex64::new(v[2], 0.0))
}

fn finite_positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

/// Loads every referenced file and checks all invariants. `mode` overrides
/// the config's own `mode` field; a mismatch between the two is reported.
pub fn prepare(config: &RunConfig, mode: Option<Mode>) -> Result<Prepared, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut push = |loc: &str, msg: String| diags.push(Diagnostic::new(loc, msg));

    let mode = match (mode, config.mode) {
        (Some(a), Some(b)) if a != b => {
            push("mode", format!("command requests {} but config declares {}", a.name(), b.name()));
            a
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => {
            push("mode", "no mode given on the command line or in the config".into());
            Mode::Classical
        }
    };

    let s = &config.sweep;
    if !s.omega_min.is_finite() || !s.omega_max.is_finite() || !(s.omega_min < s.omega_max) {
        push("sweep", format!("need finite omega_min < omega_max, got {} and {}", s.omega_min, s.omega_max));
    }
    if s.points == 0 {
        push("sweep.points", "must be at least 1".into());
    }

    let n = &config.numeric;
    if !finite_positive(n.eta) {
        push("numeric.eta", format!("must be positive, got {}", n.eta));
    }
    if !(n.mixing > 0.0 && n.mixing <= 1.0) {
        push("numeric.mixing", format!("must lie in (0, 1], got {}", n.mixing));
    }
    if !finite_positive(n.tol) {
        push("numeric.tol", format!("must be positive, got {}", n.tol));
    }
    if n.max_iter == 0 {
        push("numeric.max_iter", "must be at least 1".into());
    }

    for (name, v) in [("field.pol_in", config.field.pol_in), ("field.pol_out", config.field.pol_out)] {
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if !((n2 - 1.0).abs() <= 1e-10) {
            push(name, format!("must be a unit vector, |e|^2 = {n2}"));
        }
    }

    let model = match &config.inputs.molecule {
        Some(path) => match MolecularModel::load(path) {
            Ok(m) => Some(m),
            Err(e) => {
                push("inputs.molecule", e.to_string());
                None
            }
        },
        None => {
            if mode != Mode::DdaSolve {
                push("inputs.molecule", format!("required by {}", mode.name()));
            }
            None
        }
    };

    let particle_model = match &config.inputs.particle {
        Some(path) => match ParticleModel::load(path) {
            Ok(p) => Some(p),
            Err(e) => {
                push("inputs.particle", e.to_string());
                None
            }
        },
        None => None,
    };
    let particle_loaded = config.inputs.particle.is_none() || particle_model.is_some();

    let geometry = match config.separation {
        Some(r) => match Geometry::new(Vec3::from(r)) {
            Ok(g) => Some(g),
            Err(e) => {
                push("separation", e.to_string());
                None
            }
        },
        None => None,
    };

    let particle = match (&particle_model, mode) {
        (None, Mode::Classical | Mode::QuantumRpa) => Particle::None,
        (None, _) => {
            if particle_loaded {
                push("inputs.particle", format!("required by {}", mode.name()));
            }
            Particle::None
        }
        (Some(ParticleModel::AnalyticRpa { .. }), Mode::QuantumDda | Mode::DdaSolve) => {
            push("inputs.particle", format!("{} needs a voxelized particle", mode.name()));
            Particle::None
        }
        (Some(p @ ParticleModel::AnalyticRpa { .. }), _) => match geometry {
            Some(g) => Particle::Analytic { drude: p.drude(), geometry: g },
            None => {
                if config.separation.is_none() {
                    push("separation", "required with an analytic particle".into());
                }
                Particle::None
            }
        },
        (Some(ParticleModel::Voxelized { .. }), Mode::QuantumRpa | Mode::SelfEnergy) => {
            push("inputs.particle", format!("{} needs an analytic (rpa) particle", mode.name()));
            Particle::None
        }
        (Some(p @ ParticleModel::Voxelized { .. }), _) => match VoxelLattice::from_particle(p) {
            Ok(l) => {
                if mode == Mode::Classical && l.len() != 1 {
                    push("inputs.particle", format!("classical mode takes a single voxel, got {}", l.len()));
                }
                if matches!(mode, Mode::QuantumDda | Mode::DdaSolve) && l.is_empty() {
                    push("inputs.particle", "lattice has no voxels".into());
                }
                Particle::Lattice(l.with_radiative(n.radiative))
            }
            Err(e) => {
                push("inputs.particle", e.to_string());
                Particle::None
            }
        },
    };

    let mut modes = Vec::new();
    for (i, path) in config.inputs.modes.iter().enumerate() {
        match VibrationalMode::load(path, i) {
            Ok(m) => {
                if let Some(model) = &model {
                    if let Err(e) = m.check_compatible(model) {
                        push(&format!("inputs.modes[{i}]"), e.to_string());
                    }
                }
                modes.push(m);
            }
            Err(e) => push(&format!("inputs.modes[{i}]"), e.to_string()),
        }
    }
    let modes_loaded = modes.len() == config.inputs.modes.len();
    if mode.needs_modes() && config.inputs.modes.is_empty() {
        push("inputs.modes", format!("{} needs at least one vibrational mode", mode.name()));
    }

    let st = &config.stokes;
    let (omega_j, selected) = match (st.omega_j, st.mode) {
        (Some(_), Some(_)) => {
            push("stokes", "give either mode or omega_j, not both".into());
            (0.0, modes.clone())
        }
        (Some(w), None) => {
            if !(w >= 0.0 && w.is_finite()) {
                push("stokes.omega_j", format!("must be nonnegative, got {w}"));
            }
            (w, modes.clone())
        }
        (None, index) => {
            let j = index.unwrap_or(0);
            match modes.get(j) {
                Some(m) => (m.omega, vec![m.clone()]),
                None => {
                    if modes_loaded && (index.is_some() || !modes.is_empty()) {
                        push("stokes.mode", format!("index {j} out of range for {} modes", modes.len()));
                    }
                    (0.0, Vec::new())
                }
            }
        }
    };

    let channel = model.as_ref().and_then(|m| {
        let ch = &config.channel;
        let Some(q) = ch.q.or_else(|| m.holes().last()) else {
            push("channel.q", "molecule has no occupied orbital".into());
            return None;
        };
        let mut rc = RamanChannel::new(ch.p.unwrap_or(q), q, ch.nu, ch.nu_prime);
        if let Some(rs) = &ch.intermediates {
            rc = rc.with_intermediates(rs.clone());
        }
        match rc.intermediate_states(m) {
            Ok(_) => Some(rc),
            Err(e) => {
                push("channel", e.to_string());
                None
            }
        }
    });

    if diags.is_empty() {
        Ok(Prepared {
            mode,
            model,
            particle,
            geometry,
            modes: selected,
            channel,
            omega_j,
            anti_stokes: st.anti_stokes,
            grid: config.sweep.grid(),
            pol_in: real_vec(config.field.pol_in),
            pol_out: real_vec(config.field.pol_out),
            photon_occupancy: config.field.photon_occupancy,
            numeric: *n,
        })
    } else {
        Err(diags)
    }
}

/// Diagnostics for a config; empty means the config is runnable.
pub fn validate(config: &RunConfig, mode: Option<Mode>) -> Vec<Diagnostic> {
    prepare(config, mode).err().unwrap_or_default()
}
