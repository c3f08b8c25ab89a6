//! One function per subcommand: resolve parameters, call the engine, fill a report.

use crate::output::{Cell, Report};
use crate::params::{linspace, Params};
use clap::Args;
use feynpath::coherent::{compose_monte_carlo, dpa_auxiliary, dpa_propagator, quadratic_propagator, solve_riccati, CoherentLabel, GaussianProposal, QuadraticHamiltonian};
use feynpath::grin::{BeamBackend, EnvelopeInit, GrinMedium, GrinSolver, IndexProfile};
use feynpath::io::{read_numeric_csv, real_table, KeyValues};
use feynpath::kernels::{free_kernel, ho_kernel, OscillatorParams, ParticleParams, SpacetimeEndpoints};
use feynpath::lattice::{
    double_slit_pattern, evolve_wavefunction, lattice_kernel, AbsorbingLayer, FreeEvaluator, GridPropagator, HarmonicEvaluator, KernelEvaluator,
    LatticeMethod, SliceRule, SlitGeometry, SourceModel, SpatialGrid, TimeSlicing,
};
use feynpath::pimc::{parse_run_config, polarizability_finite_field, run_chains, Observable};
use feynpath::potential::PotentialModel;
use feynpath::qed::{
    biphoton_probability_numeric, effective_dielectric, imag_green_k_quadrature, imag_green_loop, spdc_probability, spontaneous_rate,
    DispersiveMedium1D, EffectiveDielectricModel, EmitterEnvironment, ReservoirResponse,
};
use feynpath::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::path::Path;

fn complex_cells(z: Complex64) -> [Cell; 2] {
    [Cell::Num(z.re), Cell::Num(z.im)]
}

#[derive(Args, Debug, Default)]
pub struct KernelArgs {
    /// free | ho [free]
    #[arg(long = "type")]
    pub kind: Option<String>,
    /// Start position [0]
    #[arg(long)]
    pub xa: Option<f64>,
    /// End position [0]
    #[arg(long)]
    pub xb: Option<f64>,
    /// Elapsed time [1]
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Oscillator frequency for --type ho [1]
    #[arg(long)]
    pub omega: Option<f64>,
    /// Scan the end position over [xb-min, xb-max] with this many points
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub xb_min: Option<f64>,
    #[arg(long)]
    pub xb_max: Option<f64>,
}

pub fn kernel(a: KernelArgs, p: &mut Params, r: &mut Report) -> Result<()> {
    let kind = p.choice("type", a.kind, "free", &["free", "ho"])?;
    let xa = p.get("xa", a.xa, 0.0)?;
    let t = p.get("t", a.t, 1.0)?;
    let particle = ParticleParams::new(p.get("mass", a.mass, 1.0)?, p.get("hbar", a.hbar, 1.0)?)?;
    let omega = if kind == "ho" { p.get("omega", a.omega, 1.0)? } else { 0.0 };
    let xbs = match p.opt("points", a.points)? {
        Some(n) => linspace(p.get("xb-min", a.xb_min, -2.0)?, p.get("xb-max", a.xb_max, 2.0)?, n)?,
        None => vec![p.get("xb", a.xb, 0.0)?],
    };
    let osc = OscillatorParams::new(particle, omega)?;
    r.columns = vec!["x_a", "x_b", "t", "re", "im", "abs"];
    for xb in xbs {
        let ends = SpacetimeEndpoints::over(xa, xb, t);
        let k = if kind == "ho" { ho_kernel(&ends, &osc)? } else { free_kernel(&ends, &particle)? };
        let [re, im] = complex_cells(k);
        r.row(vec![xa.into(), xb.into(), t.into(), re, im, k.norm().into()]);
    }
    Ok(())
}

#[derive(Args, Debug, Default)]
pub struct LatticeArgs {
    /// free | ho [ho]
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub xa: Option<f64>,
    #[arg(long)]
    pub xb: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Number of time slices [100]
    #[arg(long)]
    pub steps: Option<usize>,
    /// grid | recursion [grid]
    #[arg(long)]
    pub method: Option<String>,
    /// midpoint | trapezoid, for the recursion [midpoint]
    #[arg(long)]
    pub rule: Option<String>,
    #[arg(long)]
    pub grid_min: Option<f64>,
    #[arg(long)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Scan the end position over [xb-min, xb-max] with this many points
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub xb_min: Option<f64>,
    #[arg(long)]
    pub xb_max: Option<f64>,
}

pub fn lattice(a: LatticeArgs, p: &mut Params, r: &mut Report) -> Result<()> {
    let kind = p.choice("potential", a.potential, "ho", &["free", "ho"])?;
    let mass = p.get("mass", a.mass, 1.0)?;
    let particle = ParticleParams::new(mass, p.get("hbar", a.hbar, 1.0)?)?;
    let omega = if kind == "ho" { p.get("omega", a.omega, 1.0)? } else { 0.0 };
    let xa = p.get("xa", a.xa, 0.0)?;
    let t = p.get("t", a.t, 1.0)?;
    let slicing = TimeSlicing::new(p.get("steps", a.steps, 100)?, t)?;
    let method = p.choice("method", a.method, "grid", &["grid", "recursion"])?;
    let rule = match p.choice("rule", a.rule, "midpoint", &["midpoint", "trapezoid"])?.as_str() {
        "trapezoid" => SliceRule::Trapezoid,
        _ => SliceRule::Midpoint,
    };
    let grid = SpatialGrid::new(p.get("grid-min", a.grid_min, -8.0)?, p.get("grid-max", a.grid_max, 8.0)?, p.get("grid-points", a.grid_points, 2048)?)?;
    let xbs = match p.opt("points", a.points)? {
        Some(n) => linspace(p.get("xb-min", a.xb_min, -2.0)?, p.get("xb-max", a.xb_max, 2.0)?, n)?,
        None => vec![p.get("xb", a.xb, 0.5)?],
    };
    let potential = if kind == "ho" { PotentialModel::harmonic(mass, omega) } else { PotentialModel::Free };
    let osc = OscillatorParams::new(particle, omega)?;
    let values = if method == "grid" {
        GridPropagator::new(&particle, &potential, &slicing, 0.0, grid, AbsorbingLayer::default())?.kernels_from(xa, &xbs)?
    } else {
        let m = LatticeMethod::GaussianRecursion(rule);
        xbs.iter()
            .map(|&xb| lattice_kernel(&SpacetimeEndpoints::over(xa, xb, t), &particle, &potential, &slicing, &m))
            .collect::<Result<Vec<_>>>()?
    };
    r.columns = vec!["x_a", "x_b", "re", "im", "exact_re", "exact_im", "rel_error"];
    let mut worst: f64 = 0.0;
    for (&xb, k) in xbs.iter().zip(values) {
        let exact = ho_kernel(&SpacetimeEndpoints::over(xa, xb, t), &osc)?;
        let err = (k - exact).norm() / exact.norm();
        worst = worst.max(err);
        let [re, im] = complex_cells(k);
        let [ere, eim] = complex_cells(exact);
        r.row(vec![xa.into(), xb.into(), re, im, ere, eim, err.into()]);
    }
    r.result("max_rel_error", worst);
    Ok(())
}

#[derive(Args, Debug, Default)]
pub struct EvolveArgs {
    /// free | ho [free]
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Initial packet centre [0]
    #[arg(long)]
    pub x0: Option<f64>,
    /// Initial mean momentum [1]
    #[arg(long)]
    pub p0: Option<f64>,
    /// Initial position spread σ of |ψ|² [0.5]
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// exact | lattice [exact]
    #[arg(long)]
    pub method: Option<String>,
    /// Time slices for --method lattice [100]
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub grid_min: Option<f64>,
    #[arg(long)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
}

pub fn evolve(a: EvolveArgs, p: &mut Params, r: &mut Report) -> Result<()> {
    let kind = p.choice("potential", a.potential, "free", &["free", "ho"])?;
    let mass = p.get("mass", a.mass, 1.0)?;
    let hbar = p.get("hbar", a.hbar, 1.0)?;
    let particle = ParticleParams::new(mass, hbar)?;
    let omega = if kind == "ho" { p.get("omega", a.omega, 1.0)? } else { 0.0 };
    let x0 = p.get("x0", a.x0, 0.0)?;
    let p0 = p.get("p0", a.p0, 1.0)?;
    let sigma = p.get("width", a.width, 0.5)?;
    let t = p.get("t", a.t, 1.0)?;
    let method = p.choice("method", a.method, "exact", &["exact", "lattice"])?;
    let steps = if method == "lattice" { p.get("steps", a.steps, 100)? } else { 0 };
    let grid = SpatialGrid::new(p.get("grid-min", a.grid_min, -10.0)?, p.get("grid-max", a.grid_max, 10.0)?, p.get("grid-points", a.grid_points, 512)?)?;
    if !(sigma > 0.0) {
        return Err(Error::InvalidInput(format!("packet width must be positive, got {sigma}")));
    }
    let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
    let x = grid.points();
    let w = grid.weights();
    let psi0: Vec<Complex64> =
        x.iter().map(|&xi| Complex64::from_polar(norm * (-(xi - x0).powi(2) / (4.0 * sigma * sigma)).exp(), p0 * xi / hbar)).collect();
    let norm_of = |psi: &[Complex64]| -> f64 { psi.iter().zip(&w).map(|(v, wi)| v.norm_sqr() * wi).sum() };
    let psi = if method == "exact" {
        let osc = OscillatorParams::new(particle, omega)?;
        let eval: Box<dyn KernelEvaluator> = if kind == "ho" { Box::new(HarmonicEvaluator(osc)) } else { Box::new(FreeEvaluator(particle)) };
        let out = evolve_wavefunction(&psi0, &grid, eval.as_ref(), t)?;
        r.result("leakage_warning", out.leakage_warning);
        out.psi
    } else {
        let potential = if kind == "ho" { PotentialModel::harmonic(mass, omega) } else { PotentialModel::Free };
        let prop = GridPropagator::new(&particle, &potential, &TimeSlicing::new(steps, t)?, 0.0, grid, AbsorbingLayer::default())?;
        let mut psi = psi0.clone();
        prop.propagate(&mut psi);
        psi
    };
    let (n_in, n_out) = (norm_of(&psi0), norm_of(&psi));
    let mean: f64 = psi.iter().zip(&w).zip(&x).map(|((v, wi), xi)| v.norm_sqr() * wi * xi).sum::<f64>() / n_out;
    let second: f64 = psi.iter().zip(&w).zip(&x).map(|((v, wi), xi)| v.norm_sqr() * wi * xi * xi).sum::<f64>() / n_out;
    r.result("norm_in", n_in);
    r.result("norm_out", n_out);
    r.result("mean_position", mean);
    r.result("spread", (second - mean * mean).max(0.0).sqrt());
    r.columns = vec!["x", "re", "im", "abs2"];
    for (xi, v) in x.iter().zip(&psi) {
        let [re, im] = complex_cells(*v);
        r.row(vec![(*xi).into(), re, im, v.norm_sqr().into()]);
    }
    Ok(())
}

#[derive(Args, Debug, Default)]
pub struct DoubleSlitArgs {
    /// Distance between slit centres [1]
    #[arg(long)]
    pub separation: Option<f64>,
    /// Width of each slit [0.1]
    #[arg(long)]
    pub width: Option<f64>,
    /// point | collimated [point]
    #[arg(long)]
    pub source: Option<String>,
    /// Transverse position of a point source [0]
    #[arg(long)]
    pub source_x: Option<f64>,
    #[arg(long)]
    pub source_to_screen: Option<f64>,
    #[arg(long)]
    pub screen_to_detector: Option<f64>,
    #[arg(long)]
    pub total_time: Option<f64>,
    #[arg(long)]
    pub detector_min: Option<f64>,
    #[arg(long)]
    pub detector_max: Option<f64>,
    #[arg(long)]
    pub detector_points: Option<usize>,
    /// both | first | second [both]
    #[arg(long)]
    pub open: Option<String>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
}

pub fn double_slit(a: DoubleSlitArgs, p: &mut Params, r: &mut Report) -> Result<()> {
    let separation = p.get("separation", a.separation, 1.0)?;
    let width = p.get("width", a.width, 0.1)?;
    let detector = SpatialGrid::new(
        p.get("detector-min", a.detector_min, -10.0)?,
        p.get("detector-max", a.detector_max, 10.0)?,
        p.get("detector-points", a.detector_points, 512)?,
    )?;
    let mut geom = SlitGeometry::symmetric(separation, width, detector);
    geom.source = match p.choice("source", a.source, "point", &["point", "collimated"])?.as_str() {
        "collimated" => SourceModel::Collimated,
        _ => SourceModel::Point { x: p.get("source-x", a.source_x, 0.0)? },
    };
    geom.source_to_screen = p.get("source-to-screen", a.source_to_screen, 1.0)?;
    geom.screen_to_detector = p.get("screen-to-detector", a.screen_to_detector, 1.0)?;
    geom.total_time = p.get("total-time", a.total_time, 2.0)?;
    match p.choice("open", a.open, "both", &["both", "first", "second"])?.as_str() {
        "first" => geom.slits[1].open = false,
        "second" => geom.slits[0].open = false,
        _ => {}
    }
    let particle = ParticleParams::new(p.get("mass", a.mass, 1.0)?, p.get("hbar", a.hbar, 1.0)?)?;
    let pat = double_slit_pattern(&geom, &particle)?;
    r.columns = vec!["x", "p", "p1", "p2", "cross", "identity_residual"];
    let mut worst: f64 = 0.0;
    for i in 0..pat.x.len() {
        let res = pat.p[i] - (pat.p1[i] + pat.p2[i]) - pat.cross[i];
        worst = worst.max(res.abs());
        r.row(vec![pat.x[i].into(), pat.p[i].into(), pat.p1[i].into(), pat.p2[i].into(), pat.cross[i].into(), res.into()]);
    }
    r.result("max_identity_residual", worst);
    r.result("interference_visibility", pat.interference_visibility());
    Ok(())
}

#[derive(Args, Debug, Default)]
pub struct GrinArgs {
    /// Background index n₀ [1.5]
    #[arg(long)]
    pub n0: Option<f64>,
    /// Constant gradient parameter [1]
    #[arg(long)]
    pub g: Option<f64>,
    /// CSV file with columns z, g(z); overrides --g
    #[arg(long)]
    pub profile: Option<String>,
    /// Vacuum wavelength [1]
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Output plane [1]
    #[arg(long)]
    pub z: Option<f64>,
    /// Input Gaussian radius, E = exp(−(x − x0)²/w0²) [1]
    #[arg(long)]
    pub w0: Option<f64>,
    #[arg(long)]
    pub x0: Option<f64>,
    /// kernel | modes | checked [kernel]
    #[arg(long)]
    pub backend: Option<String>,
    #[arg(long)]
    pub grid_min: Option<f64>,
    #[arg(long)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
}

pub fn grin(a: GrinArgs, p: &mut Params, base: &Path, r: &mut Report) -> Result<()> {
    let n0 = p.get("n0", a.n0, 1.5)?;
    let profile = match p.opt("profile", a.profile)? {
        Some(path) => IndexProfile::Tabulated(real_table(&read_numeric_csv(&base.join(path))?)?),
        None => IndexProfile::Constant(p.get("g", a.g, 1.0)?),
    };
    let medium = GrinMedium::new(n0, profile, p.get("wavelength", a.wavelength, 1.0)?)?;
    let z = p.get("z", a.z, 1.0)?;
    let w0 = p.get("w0", a.w0, 1.0)?;
    let x0 = p.get("x0", a.x0, 0.0)?;
    let backend = match p.choice("backend", a.backend, "kernel", &["kernel", "modes", "checked"])?.as_str() {
        "modes" => BeamBackend::Modes,
        "checked" => BeamBackend::Checked,
        _ => BeamBackend::Kernel,
    };
    let grid = SpatialGrid::new(p.get("grid-min", a.grid_min, -8.0)?, p.get("grid-max", a.grid_max, 8.0)?, p.get("grid-points", a.grid_points, 1601)?)?;
    if !(w0 > 0.0) {
        return Err(Error::InvalidInput(format!("beam radius must be positive, got {w0}")));
    }
    let field: Vec<Complex64> = grid.points().iter().map(|&x| Complex64::new((-(x - x0).powi(2) / (w0 * w0)).exp(), 0.0)).collect();
    let solver = GrinSolver::new(medium, z, EnvelopeInit::FixedPoint)?;
    let out = solver.propagate_beam(&field, &grid, z, backend)?;
    r.result("power_in", out.power_in);
    r.result("power_out", out.power_out);
    if let Some(m) = out.modes_used {
        r.result("modes_used", m);
    }
    r.result("weakly_inhomogeneous", out.weakly_inhomogeneous);
    r.columns = vec!["x", "re", "im", "abs2"];
    for (x, e) in out.x.iter().zip(&out.field) {
        let [re, im] = complex_cells(*e);
        r.row(vec![(*x).into(), re, im, e.norm_sqr().into()]);
    }
    Ok(())
}

#[derive(Args, Debug, Default)]
pub struct DpaArgs {
    /// Oscillator frequency ω [1]
    #[arg(long)]
    pub omega: Option<f64>,
    /// Pump strength κ [0.5]
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub t_a: Option<f64>,
    #[arg(long)]
    pub t_b: Option<f64>,
    /// Output mesh intervals [100]
    #[arg(long)]
    pub steps: Option<usize>,
    /// Initial coherent label as re,im [0,0]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_a: Option<String>,
    /// Final coherent label as re,im [0,0]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_b: Option<String>,
    /// Monte Carlo samples for the composition check (0 skips it) [0]
    #[arg(long)]
    pub samples: Option<u64>,
    /// Intermediate time for the composition check [midpoint]
    #[arg(long)]
    pub t_c: Option<f64>,
}

pub fn dpa(a: DpaArgs, p: &mut Params, seed: Option<u64>, r: &mut Report) -> Result<()> {
    let omega = p.get("omega", a.omega, 1.0)?;
    let kappa = p.get("kappa", a.kappa, 0.5)?;
    let t_a = p.get("t-a", a.t_a, 0.0)?;
    let t_b = p.get("t-b", a.t_b, 2.0)?;
    let steps = p.get("steps", a.steps, 100)?;
    let from = CoherentLabel::new(p.complex("alpha-a", a.alpha_a, "0,0")?, t_a)?;
    let to = CoherentLabel::new(p.complex("alpha-b", a.alpha_b, "0,0")?, t_b)?;
    let samples = p.get("samples", a.samples, 0)?;
    let sol = solve_riccati(&QuadraticHamiltonian::degenerate_amplifier(omega, kappa), t_a, t_b, 1e-13)?;
    r.columns = vec!["t", "pair_re", "pair_im", "transfer_re", "transfer_im", "displacement_re", "displacement_im", "pair_error", "transfer_error"];
    let mut worst: f64 = 0.0;
    for t in linspace(t_a, t_b, steps + 1)? {
        let v = sol.at(t);
        let (x, y) = dpa_auxiliary(t, t_a, omega, kappa);
        let (ex, ey) = ((v.pair - x).norm(), (v.transfer - y).norm());
        worst = worst.max(ex).max(ey);
        let [pr, pi] = complex_cells(v.pair);
        let [tr, ti] = complex_cells(v.transfer);
        let [dr, di] = complex_cells(v.displacement);
        r.row(vec![t.into(), pr, pi, tr, ti, dr, di, ex.into(), ey.into()]);
    }
    let numeric = quadratic_propagator(&from, &to, &sol)?;
    let closed = dpa_propagator(&from, &to, omega, kappa);
    r.result("max_auxiliary_error", worst);
    r.result("propagator_re", numeric.re);
    r.result("propagator_im", numeric.im);
    r.result("closed_form_re", closed.re);
    r.result("closed_form_im", closed.im);
    r.result("propagator_difference", (numeric - closed).norm());
    if samples > 0 {
        let t_c = p.get("t-c", a.t_c, 0.5 * (t_a + t_b))?;
        let seed = seed.unwrap_or(1);
        r.seed = Some(seed);
        let est = compose_monte_carlo(
            |c| dpa_propagator(&CoherentLabel { alpha: c, time: t_c }, &to, omega, kappa),
            |c| dpa_propagator(&from, &CoherentLabel { alpha: c, time: t_c }, omega, kappa),
            samples,
            seed,
            GaussianProposal::default(),
        )?;
        r.result("composition_re", est.value.re);
        r.result("composition_im", est.value.im);
        r.result("composition_std_error", est.std_error);
        r.result("composition_rel_error", (est.value - closed).norm() / closed.norm());
    }
    Ok(())
}

#[derive(Args, Debug, Default)]
pub struct PimcArgs {
    /// ho | double-well | tabulated [ho]
    #[arg(long)]
    pub system: Option<String>,
    /// Temperature k_B T (required here or as `temperature` in the config)
    #[arg(long)]
    pub temp: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Barrier height of the double well
    #[arg(long)]
    pub height: Option<f64>,
    /// Well position of the double well
    #[arg(long)]
    pub x_min: Option<f64>,
    /// CSV of x, V(x) for the tabulated system
    #[arg(long)]
    pub table: Option<String>,
    #[arg(long)]
    pub beads: Option<usize>,
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub chains: Option<usize>,
    #[arg(long)]
    pub charge: Option<f64>,
    #[arg(long)]
    pub field: Option<f64>,
    /// Field magnitudes for the polarizability, comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub fields: Option<String>,
}

/// PIMC reads its native `key = value` description (see `feynpath::pimc::parse_run_config`);
/// flags override entries of the config file.
pub fn pimc(a: PimcArgs, mut kv: KeyValues, seed: Option<u64>, base: &Path, r: &mut Report) -> Result<()> {
    if let Some(s) = a.system {
        let name = match s.as_str() {
            "ho" | "harmonic" => "harmonic",
            "double-well" | "double_well" => "double_well",
            "tabulated" => "tabulated",
            other => return Err(Error::InvalidInput(format!("system must be ho | double-well | tabulated, got {other:?}"))),
        };
        kv.insert("potential", name);
    }
    let numbers = [
        ("temperature", a.temp),
        ("mass", a.mass),
        ("omega", a.omega),
        ("height", a.height),
        ("x_min", a.x_min),
        ("charge", a.charge),
        ("field", a.field),
    ];
    for (k, v) in numbers {
        if let Some(v) = v {
            kv.insert(k, &v.to_string());
        }
    }
    for (k, v) in [("beads", a.beads), ("sweeps", a.sweeps), ("burn_in", a.burn_in), ("chains", a.chains)] {
        if let Some(v) = v {
            kv.insert(k, &v.to_string());
        }
    }
    if let Some(t) = a.table {
        kv.insert("table", &t);
    }
    if let Some(f) = a.fields {
        kv.insert("fields", &f);
    }
    if let Some(s) = seed {
        kv.insert("seed", &s.to_string());
    }
    let input = parse_run_config(&kv, base)?;
    kv.finish()?;
    r.params = kv.entries().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    r.seed = Some(input.config.seed);

    let out = run_chains(&input.system, &input.config)?;
    r.columns = vec!["observable", "mean", "error", "autocorrelation_time", "samples", "trusted"];
    for obs in Observable::ALL {
        let e = out.estimate(obs);
        r.row(vec![obs.name().into(), e.mean.into(), e.error.into(), e.autocorrelation_time.into(), e.samples.into(), e.trusted.into()]);
    }
    let stats = out.stats();
    r.result("acceptance", stats.acceptance());
    if let PotentialModel::Harmonic { stiffness } = input.system.potential {
        let omega = (stiffness / input.system.mass).sqrt();
        r.result("exact_energy", 0.5 * omega / (0.5 * omega / input.system.temperature).tanh());
    }
    if !input.fields.is_empty() {
        let pol = polarizability_finite_field(&input.system, &input.fields, &input.config)?;
        r.result("polarizability", pol.alpha);
        r.result("polarizability_error", pol.error);
        r.result("polarizability_nonlinearity", pol.nonlinearity);
    }
    Ok(())
}

#[derive(Args, Debug, Default)]
pub struct SpdcArgs {
    /// Phase mismatch Δk [0]
    #[arg(long)]
    pub dk: Option<f64>,
    /// Loss-length product ΓL [0]
    #[arg(long)]
    pub gamma_l: Option<f64>,
    /// Medium length L [1]
    #[arg(long)]
    pub l: Option<f64>,
    /// Tabulate P against ΓL for each mismatch in --dk-values
    #[arg(long)]
    pub sweep: bool,
    /// Mismatches Δk for --sweep [0,5,10]
    #[arg(long, allow_hyphen_values = true)]
    pub dk_values: Option<String>,
    /// Largest ΓL for --sweep [3]
    #[arg(long)]
    pub gamma_max: Option<f64>,
    /// Points per curve for --sweep [61]
    #[arg(long)]
    pub points: Option<usize>,
    /// Also evaluate the vertex integral by quadrature
    #[arg(long)]
    pub numeric: bool,
}

pub fn spdc(a: SpdcArgs, p: &mut Params, r: &mut Report) -> Result<()> {
    let l = p.get("l", a.l, 1.0)?;
    let numeric = p.get("numeric", if a.numeric { Some(true) } else { None }, false)?;
    let sweep = p.get("sweep", if a.sweep { Some(true) } else { None }, false)?;
    let cases: Vec<(f64, f64)> = if sweep {
        let dks = p.list("dk-values", a.dk_values, "0,5,10")?;
        let gls = linspace(0.0, p.get("gamma-max", a.gamma_max, 3.0)?, p.get("points", a.points, 61)?)?;
        dks.iter().flat_map(|&dk| gls.iter().map(move |&gl| (dk, gl))).collect()
    } else {
        vec![(p.get("dk", a.dk, 0.0)?, p.get("gamma-l", a.gamma_l, 0.0)?)]
    };
    r.columns = if numeric { vec!["dk", "dk_l", "gamma_l", "p", "p_numeric"] } else { vec!["dk", "dk_l", "gamma_l", "p"] };
    for (dk, gl) in cases {
        let gamma = gl / l;
        let prob = spdc_probability(dk, gamma, l)?;
        let mut row: Vec<Cell> = vec![dk.into(), (dk * l).into(), gl.into(), prob.into()];
        if numeric {
            let m = DispersiveMedium1D::with_mismatch(dk, 0.5 * gamma, 0.5 * gamma, l)?;
            row.push(biphoton_probability_numeric(&m)?.into());
        }
        r.row(row);
    }
    Ok(())
}

#[derive(Args, Debug, Default)]
pub struct EmissionArgs {
    /// ε₁ [1]
    #[arg(long)]
    pub eps_real: Option<f64>,
    /// ε₂ [0]
    #[arg(long)]
    pub eps_imag: Option<f64>,
    /// Vacuum rate Γ₀ [1]
    #[arg(long)]
    pub gamma0: Option<f64>,
    /// Transition frequency ω₀ [1]
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Also evaluate Im G by momentum quadrature with this cutoff multiple (needs ε₂ > 0)
    #[arg(long)]
    pub cutoff_multiple: Option<f64>,
    /// Scan ε₁ over [eps-real-min, eps-real-max] with this many points
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub eps_real_min: Option<f64>,
    #[arg(long)]
    pub eps_real_max: Option<f64>,
}

pub fn emission(a: EmissionArgs, p: &mut Params, r: &mut Report) -> Result<()> {
    let eps_imag = p.get("eps-imag", a.eps_imag, 0.0)?;
    let gamma0 = p.get("gamma0", a.gamma0, 1.0)?;
    let omega0 = p.get("omega0", a.omega0, 1.0)?;
    let cutoff = p.opt("cutoff-multiple", a.cutoff_multiple)?;
    let eps_reals = match p.opt("points", a.points)? {
        Some(n) => linspace(p.get("eps-real-min", a.eps_real_min, -2.0)?, p.get("eps-real-max", a.eps_real_max, 4.0)?, n)?,
        None => vec![p.get("eps-real", a.eps_real, 1.0)?],
    };
    r.columns = vec!["eps_real", "eps_imag", "rate", "rate_ratio", "imag_green"];
    if cutoff.is_some() {
        r.columns.push("imag_green_k");
    }
    for e1 in eps_reals {
        let env = EmitterEnvironment::new(e1, eps_imag, gamma0, omega0)?;
        let rate = spontaneous_rate(&env)?;
        let mut row: Vec<Cell> = vec![e1.into(), eps_imag.into(), rate.into(), (rate / gamma0).into(), imag_green_loop(&env)?.into()];
        if let Some(c) = cutoff {
            row.push(imag_green_k_quadrature(&env, c)?.value.into());
        }
        r.row(row);
    }
    Ok(())
}

#[derive(Args, Debug, Default)]
pub struct DielectricArgs {
    /// Resonance ω₀ [1]
    #[arg(long)]
    pub resonance: Option<f64>,
    /// Static polarizability β [0.5]
    #[arg(long)]
    pub polarizability: Option<f64>,
    /// Shape factor, 0 or 1 [1]
    #[arg(long)]
    pub shape: Option<f64>,
    /// Vacuum permittivity ε₀ [1]
    #[arg(long)]
    pub eps0: Option<f64>,
    /// Lorentz damping rate; without it the reservoir is switched off
    #[arg(long)]
    pub damping: Option<f64>,
    #[arg(long)]
    pub omega_min: Option<f64>,
    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

pub fn dielectric(a: DielectricArgs, p: &mut Params, r: &mut Report) -> Result<()> {
    let reservoir = match p.opt("damping", a.damping)? {
        Some(gamma) => ReservoirResponse::LorentzDamping { gamma },
        None => ReservoirResponse::None,
    };
    let model = EffectiveDielectricModel::new(
        p.get("resonance", a.resonance, 1.0)?,
        p.get("polarizability", a.polarizability, 0.5)?,
        p.get("shape", a.shape, 1.0)?,
        p.get("eps0", a.eps0, 1.0)?,
        reservoir,
    )?;
    let omegas = linspace(p.get("omega-min", a.omega_min, 0.0)?, p.get("omega-max", a.omega_max, 2.0)?, p.get("points", a.points, 201)?)?;
    r.columns = vec!["omega", "eps_re", "eps_im"];
    for w in omegas {
        match effective_dielectric(w, &model) {
            Ok(e) => {
                let [re, im] = complex_cells(e);
                r.row(vec![w.into(), re, im]);
            }
            // a scan can land on the undamped resonance; skip that sample
            Err(e @ Error::Pole(_)) => r.errors.push(format!("omega = {w}: {e}")),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
