//! Experiment kinds: schema and runner for each.

use clap::ValueEnum;
use enantio::encircle::{
    make_loop, run_switch, stability_sweep, switch_alpha, Deformation, Direction, LoopOptions, LoopResult, SweepMode,
};
use enantio::fiber::{
    alpha_from_solution, beating_period, fiber_eigenvalues, fiber_ep_positions, lab_twist_rate, propagate_fiber, sensitivity, solve_lp01,
    FiberConfig, InputPolarization, Observable, RotationSign, SolutionConfig, PAPER_ALPHA,
};
use enantio::nhq_core::{eig2, StepControl};
use enantio::resonance::{cd_tanh_estimate, ep_gamma, evolve_cd, lifetime, pt_phase, PtPhase, ResonanceConfig};
use enantio::three_level::{
    build_hamiltonian, calibrate_convention, default_region, ep_closed_form, locate_eps, reference_ep, DotProduct, EpPoint, Handedness,
    MolecularFieldConfig, Polarization3, RabiConvention, REFERENCE_EP_ANCHOR,
};
use enantio::units::{au_to_fs, fs_to_au};
use enantio::Complex64;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::{num, RunOutput, Table};
use crate::schema::{def, opt, req, Field, Params, Ty};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Exceptional points of both enantiomers in the (Δ, F₃) plane.
    EpMap,
    /// Dynamical encirclement of the reference point by both enantiomers.
    Encircle,
    /// Switch parameter on deformed loops.
    Stability,
    /// Bound populations and circular dichroism of the shape resonance.
    StabilizeCd,
    /// Polarization propagation along the twisted fiber.
    FiberRun,
    /// Enantiomeric-excess sensitivity of the fiber output.
    FiberSensitivity,
    /// LP₀₁ mode and evanescent power fraction.
    ModeSolve,
}

const POLARIZATIONS: &[&str] = &["plus", "minus", "x", "y", "z"];

const MODEL: &[Field] = &[
    req("model.eta", Ty::Float),
    req("model.f1_au", Ty::Float),
    req("model.phase_light_rad", Ty::Float),
    def("model.phase_mol_rad", Ty::Float, "0.0"),
    def("model.rabi_convention", Ty::Choice(&["full", "half"]), "\"full\""),
    def("model.dot_product", Ty::Choice(&["sesquilinear", "bilinear"]), "\"sesquilinear\""),
    def("model.e1", Ty::Choice(POLARIZATIONS), "\"plus\""),
    def("model.e2", Ty::Choice(POLARIZATIONS), "\"plus\""),
    def("model.e3", Ty::Choice(POLARIZATIONS), "\"z\""),
    opt("model.d1e_au", Ty::Vec3),
    opt("model.d2e_au", Ty::Vec3),
    opt("model.d12_au", Ty::Vec3),
];

const LOOP_NUMERICS: &[Field] = &[
    req("loop.t_loop_au", Ty::Float),
    def("loop.t0_au", Ty::Float, "0.0"),
    def("numerics.outputs", Ty::Int, "4096"),
    def("numerics.rel_tol", Ty::Float, "1e-10"),
    def("numerics.abs_tol", Ty::Float, "1e-14"),
    def("numerics.trace_samples", Ty::Int, "512"),
];

const FIBER: &[Field] = &[
    def("fiber.n_core", Ty::Float, "1.4905"),
    def("fiber.n_solution", Ty::Float, "1.459"),
    def("fiber.r_core_m", Ty::Float, "0.5e-6"),
    def("fiber.wavelength_m", Ty::Float, "589e-9"),
    req("fiber.delta_gamma_per_m", Ty::Float),
    def("fiber.delta_beta_per_m", Ty::Float, "0.0"),
    req("fiber.phi_t_per_m", Ty::Float),
    req("fiber.length_m", Ty::Float),
    def("fiber.photoelastic_rg", Ty::Float, "0.0"),
    def("solution.alpha_per_m", Ty::Float, "2.104"),
    def("solution.sign", Ty::Choice(&["figure-matched", "as-printed"]), "\"figure-matched\""),
    def("run.input", Ty::Choice(&["rcp", "lcp", "linear"]), "\"rcp\""),
    def("run.theta_rad", Ty::Float, "0.0"),
    def("numerics.rel_tol", Ty::Float, "1e-11"),
    def("numerics.abs_tol", Ty::Float, "1e-14"),
];

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Self::EpMap => "ep-map",
            Self::Encircle => "encircle",
            Self::Stability => "stability",
            Self::StabilizeCd => "stabilize-cd",
            Self::FiberRun => "fiber-run",
            Self::FiberSensitivity => "fiber-sensitivity",
            Self::ModeSolve => "mode-solve",
        }
    }

    pub fn schema(self) -> Vec<Field> {
        let mut s = Vec::new();
        match self {
            Self::EpMap => {
                s.extend_from_slice(MODEL);
                s.extend_from_slice(&[
                    def("search.method", Ty::Choice(&["numeric", "closed-form"]), "\"numeric\""),
                    def("search.tol", Ty::Float, "1e-7"),
                    def("map.points", Ty::Int, "0"),
                ]);
            }
            Self::Encircle => {
                s.extend_from_slice(MODEL);
                s.extend_from_slice(LOOP_NUMERICS);
                s.extend_from_slice(&[
                    def("loop.radius_scale", Ty::Float, "1.0"),
                    def("loop.center_shift", Ty::Float, "1.0"),
                    def("output.traces", Ty::Bool, "true"),
                ]);
            }
            Self::Stability => {
                s.extend_from_slice(MODEL);
                s.extend_from_slice(LOOP_NUMERICS);
                s.extend_from_slice(&[
                    req("stability.mode", Ty::Choice(&["radius", "center"])),
                    req("stability.values", Ty::FloatList),
                ]);
            }
            Self::StabilizeCd => s.extend_from_slice(&[
                req("resonance.omega_d_au", Ty::Float),
                req("resonance.epsilon", Ty::Float),
                def("resonance.delta_au", Ty::Float, "0.0"),
                req("resonance.gamma_ratio", Ty::Float),
                req("run.t_end_fs", Ty::Float),
                def("run.outputs", Ty::Int, "1000"),
                def("numerics.rel_tol", Ty::Float, "1e-10"),
                def("numerics.abs_tol", Ty::Float, "1e-16"),
            ]),
            Self::FiberRun => {
                s.extend_from_slice(FIBER);
                s.extend_from_slice(&[req("solution.ee", Ty::Float), def("run.outputs", Ty::Int, "2000")]);
            }
            Self::FiberSensitivity => {
                s.extend_from_slice(FIBER);
                s.extend_from_slice(&[
                    req("sensitivity.ee_min", Ty::Float),
                    req("sensitivity.ee_max", Ty::Float),
                    req("sensitivity.ee_points", Ty::Int),
                    def("sensitivity.observable", Ty::Choice(&["power", "ellipticity"]), "\"power\""),
                ]);
            }
            Self::ModeSolve => s.extend_from_slice(&[
                req("fiber.n_core", Ty::Float),
                req("fiber.n_solution", Ty::Float),
                req("fiber.r_core_m", Ty::Float),
                req("fiber.wavelength_m", Ty::Float),
                def("solution.specific_rotation_deg_ml_per_g_dm", Ty::Float, "57.24"),
                def("solution.density_g_per_ml", Ty::Float, "0.948"),
            ]),
        }
        s
    }

    pub fn run(self, p: &Params) -> Result<RunOutput, CliError> {
        match self {
            Self::EpMap => ep_map(p),
            Self::Encircle => encircle(p),
            Self::Stability => stability(p),
            Self::StabilizeCd => stabilize_cd(p),
            Self::FiberRun => fiber_run(p),
            Self::FiberSensitivity => fiber_sensitivity(p),
            Self::ModeSolve => mode_solve(p),
        }
    }
}

fn invalid(key: &str, message: impl Into<String>) -> CliError {
    CliError::Validation(crate::error::ValidationReport::invalid(key, message))
}

fn polarization(name: &str) -> Polarization3 {
    let c = |re: f64| Complex64::new(re, 0.0);
    match name {
        "plus" => Polarization3::circular_plus(),
        "minus" => Polarization3::circular_minus(),
        "x" => Polarization3::new([c(1.0), c(0.0), c(0.0)]).expect("unit"),
        "y" => Polarization3::new([c(0.0), c(1.0), c(0.0)]).expect("unit"),
        _ => Polarization3::linear_z(),
    }
}

/// R-enantiomer configuration from `model.*`.
fn molecule(p: &Params) -> Result<MolecularFieldConfig, CliError> {
    let mut cfg = MolecularFieldConfig::reference(Handedness::R);
    cfg.f1 = enantio::three_level::Field { amplitude: p.f64("model.f1_au"), polarization: polarization(p.str("model.e1")) };
    cfg.f2.polarization = polarization(p.str("model.e2"));
    cfg.e3 = polarization(p.str("model.e3"));
    cfg = cfg.with_eta(p.f64("model.eta"));
    cfg.phase_light = p.f64("model.phase_light_rad");
    cfg.phase_mol = p.f64("model.phase_mol_rad");
    cfg.rabi_convention = if p.str("model.rabi_convention") == "half" { RabiConvention::HalfAmplitude } else { RabiConvention::FullAmplitude };
    cfg.dot_product = if p.str("model.dot_product") == "bilinear" { DotProduct::Bilinear } else { DotProduct::Sesquilinear };
    if let Some(d) = p.vec3("model.d1e_au") {
        cfg.d1e = d;
    }
    if let Some(d) = p.vec3("model.d2e_au") {
        cfg.d2e = d;
    }
    if let Some(d) = p.vec3("model.d12_au") {
        cfg.d12 = d;
    }
    if !(cfg.f1.amplitude > 0.0) || cfg.f2.amplitude < 0.0 {
        return Err(invalid("model.f1_au", "field amplitudes must be positive and eta non-negative"));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn point_json(p: &EpPoint) -> Value {
    json!({"delta_au": num(p.delta), "f3_au": num(p.f3)})
}

fn ep_map(p: &Params) -> Result<RunOutput, CliError> {
    let cfg_r = molecule(p)?;
    let numeric = p.str("search.method") == "numeric";
    let tol = p.f64("search.tol");
    let mut records = Table::new(&["handedness", "index", "delta_au", "f3_au", "gap_au", "phase_rigidity", "converged"]);
    let mut per_hand = serde_json::Map::new();
    for h in [Handedness::R, Handedness::L] {
        let cfg = cfg_r.with_handedness(h);
        let closed = ep_closed_form(&cfg).ok();
        let mut points = Vec::new();
        if numeric {
            let mut found = locate_eps(&cfg, None, tol)?;
            found.sort_by(|a, b| a.params[0].total_cmp(&b.params[0]).then(a.params[1].total_cmp(&b.params[1])));
            for (i, c) in found.iter().enumerate() {
                records.push(vec![
                    h.label().into(),
                    i.into(),
                    c.params[0].into(),
                    c.params[1].into(),
                    c.gap.into(),
                    c.phase_rigidity.into(),
                    c.converged.into(),
                ]);
                points.push(json!({
                    "delta_au": num(c.params[0]), "f3_au": num(c.params[1]), "gap_au": num(c.gap),
                    "phase_rigidity": num(c.phase_rigidity), "converged": c.converged,
                }));
            }
        } else if let Some(pts) = closed {
            for (i, q) in pts.iter().enumerate() {
                let e = eig2(&build_hamiltonian(&cfg, q.delta, q.f3))?;
                records.push(vec![
                    h.label().into(),
                    i.into(),
                    q.delta.into(),
                    q.f3.into(),
                    e.gap().into(),
                    e.phase_rigidity().into(),
                    true.into(),
                ]);
                points.push(point_json(q));
            }
        }
        per_hand.insert(
            h.label().to_string(),
            json!({
                "points": points,
                "closed_form": closed.map(|c| c.iter().map(point_json).collect::<Vec<_>>()),
            }),
        );
    }
    let mut traces = Vec::new();
    let n = p.usize("map.points");
    if n >= 2 {
        let region = default_region(&cfg_r);
        let mut map = Table::new(&["delta_au", "f3_au", "gap_r_au", "gap_l_au"]);
        let cfg_l = cfg_r.mirrored();
        for i in 0..n {
            let d = region.lo[0] + (region.hi[0] - region.lo[0]) * i as f64 / (n - 1) as f64;
            for j in 0..n {
                let f = region.lo[1] + (region.hi[1] - region.lo[1]) * j as f64 / (n - 1) as f64;
                let gr = eig2(&build_hamiltonian(&cfg_r, d, f))?.gap();
                let gl = eig2(&build_hamiltonian(&cfg_l, d, f))?.gap();
                map.push(vec![d.into(), f.into(), gr.into(), gl.into()]);
            }
        }
        traces.push(("gap_map.csv".to_string(), map));
    }
    let calibration = match calibrate_convention(&cfg_r, REFERENCE_EP_ANCHOR) {
        Ok((conv, scores)) => json!({
            "selected": if conv == RabiConvention::FullAmplitude { "full" } else { "half" },
            "score_full": num(scores[0]), "score_half": num(scores[1]),
        }),
        Err(e) => json!({"error": e.to_string()}),
    };
    let summary = json!({
        "kind": "ep-map",
        "method": p.str("search.method"),
        "enantiomers": Value::Object(per_hand),
        "convention_calibration": calibration,
    });
    Ok(RunOutput { summary, records, traces })
}

fn loop_options(p: &Params) -> Result<LoopOptions, CliError> {
    let opts = LoopOptions {
        outputs: p.usize("numerics.outputs"),
        rel_tol: p.f64("numerics.rel_tol"),
        abs_tol: p.f64("numerics.abs_tol"),
        trace_samples: p.usize("numerics.trace_samples"),
    };
    if opts.outputs == 0 || opts.trace_samples < 256 {
        return Err(invalid("numerics", "outputs must be positive and trace_samples at least 256"));
    }
    Ok(opts)
}

fn loop_trace(run: &LoopResult) -> Table {
    let mut t = Table::new(&[
        "t_au", "delta_au", "f3_au", "re_c1", "im_c1", "re_c2", "im_c2", "p_plus", "p_minus", "inversion", "norm_sq",
    ]);
    for i in 0..run.times.len() {
        let a = run.amplitudes[i];
        t.push(vec![
            run.times[i].into(),
            run.delta[i].into(),
            run.f3[i].into(),
            a.c1.re.into(),
            a.c1.im.into(),
            a.c2.re.into(),
            a.c2.im.into(),
            run.p_plus[i].into(),
            run.p_minus[i].into(),
            run.a_of_t[i].into(),
            a.norm_sq().into(),
        ]);
    }
    t
}

fn encircle(p: &Params) -> Result<RunOutput, CliError> {
    let cfg_r = molecule(p)?;
    let opts = loop_options(p)?;
    let ep = reference_ep(&cfg_r)?;
    let deformation = Deformation { radius_scale: p.f64("loop.radius_scale"), center_shift: p.f64("loop.center_shift") };
    let path = make_loop(ep, deformation, Direction::Counterclockwise, p.f64("loop.t_loop_au"), p.f64("loop.t0_au"))?;
    let mut records = Table::new(&[
        "handedness", "alpha", "s_ccw_plus", "s_ccw_minus", "s_cw_plus", "s_cw_minus", "residual_min", "residual_max", "encloses", "swap_flag",
    ]);
    let mut traces = Vec::new();
    let mut runs_json = Vec::new();
    let mut alphas = serde_json::Map::new();
    for h in [Handedness::R, Handedness::L] {
        let cfg = cfg_r.with_handedness(h);
        let runs = run_switch(&cfg, &path, &opts)?;
        let alpha = switch_alpha(&runs)?;
        let residuals: Vec<f64> = runs.all().iter().map(|r| r.residual).collect();
        let encloses = ep_closed_form(&cfg)?.iter().filter(|q| path.encloses(**q)).count() % 2 == 1;
        records.push(vec![
            h.label().into(),
            alpha.into(),
            runs.ccw_plus.s.into(),
            runs.ccw_minus.s.into(),
            runs.cw_plus.s.into(),
            runs.cw_minus.s.into(),
            residuals.iter().copied().fold(f64::INFINITY, f64::min).into(),
            residuals.iter().copied().fold(0.0, f64::max).into(),
            encloses.into(),
            runs.ccw_plus.swap_flag.into(),
        ]);
        alphas.insert(format!("alpha_{}", h.label()), num(alpha));
        for run in runs.all() {
            let name = format!("{}_{}_{}", h.label(), run.path.direction.label(), run.initial_branch.label());
            runs_json.push(json!({
                "run": name,
                "s": num(run.s),
                "final_inversion": num(run.final_inversion()),
                "residual": num(run.residual),
                "adiabatic_sum": num(run.adiabatic_sum),
                "swap_flag": run.swap_flag,
            }));
            if p.bool("output.traces") {
                traces.push((format!("loop_{name}.csv"), loop_trace(run)));
            }
        }
    }
    let mut summary = json!({
        "kind": "encircle",
        "encircled_point": point_json(&ep),
        "path": {
            "center_delta_au": num(path.center.0), "center_f3_au": num(path.center.1),
            "radius_delta_au": num(path.radii.0), "radius_f3_au": num(path.radii.1),
            "t_loop_au": num(path.t_loop), "t0_au": num(path.t0),
        },
        "runs": runs_json,
    });
    summary.as_object_mut().expect("object").extend(alphas);
    Ok(RunOutput { summary, records, traces })
}

fn stability(p: &Params) -> Result<RunOutput, CliError> {
    let cfg_r = molecule(p)?;
    let opts = loop_options(p)?;
    let mode = if p.str("stability.mode") == "radius" { SweepMode::Radius } else { SweepMode::Center };
    let rows = stability_sweep(&cfg_r, &cfg_r.mirrored(), mode, &p.floats("stability.values"), p.f64("loop.t_loop_au"), &opts)?;
    let mut records = Table::new(&[
        "value", "alpha_r", "alpha_l", "residual_r", "residual_l", "encloses_r", "encloses_l", "swap_r", "swap_l",
    ]);
    for r in &rows {
        records.push(vec![
            r.value.into(),
            r.alpha_r.into(),
            r.alpha_l.into(),
            r.residual_r.into(),
            r.residual_l.into(),
            r.encloses_r.into(),
            r.encloses_l.into(),
            r.swap_r.into(),
            r.swap_l.into(),
        ]);
    }
    let summary = json!({
        "kind": "stability",
        "mode": p.str("stability.mode"),
        "rows": rows.iter().map(|r| json!({
            "value": num(r.value), "alpha_R": num(r.alpha_r), "alpha_L": num(r.alpha_l),
            "encloses_R": r.encloses_r, "encloses_L": r.encloses_l,
        })).collect::<Vec<_>>(),
    });
    Ok(RunOutput { summary, records, traces: Vec::new() })
}

fn phase_label(ph: PtPhase) -> &'static str {
    match ph {
        PtPhase::Symmetric => "pt_symmetric",
        PtPhase::Broken => "pt_broken",
        PtPhase::Exceptional => "ep",
    }
}

fn stabilize_cd(p: &Params) -> Result<RunOutput, CliError> {
    let omega = p.f64("resonance.omega_d_au");
    let ratio = p.f64("resonance.gamma_ratio");
    let cfg = ResonanceConfig::new(omega, p.f64("resonance.epsilon"), p.f64("resonance.delta_au"), ratio * omega, Handedness::R)?;
    let t_end = fs_to_au(p.f64("run.t_end_fs"));
    if !(t_end > 0.0) {
        return Err(invalid("run.t_end_fs", "must be positive"));
    }
    let outputs = p.usize("run.outputs").max(1);
    let ctl = StepControl::with_tolerances(p.f64("numerics.rel_tol"), p.f64("numerics.abs_tol")).with_outputs(outputs);
    let tr = evolve_cd(&cfg, t_end, &ctl)?;
    let cfg_l = cfg.mirrored();
    let (tau_r, tau_l) = (lifetime(&cfg)?, lifetime(&cfg_l)?);
    let (g_r, g_l) = ep_gamma(&cfg);
    let mut trace = Table::new(&["t_fs", "t_au", "p_r", "p_l", "cd", "cd_tanh_estimate"]);
    for i in 0..tr.times_au.len() {
        trace.push(vec![
            tr.times_fs[i].into(),
            tr.times_au[i].into(),
            tr.p_r[i].into(),
            tr.p_l[i].into(),
            tr.cd[i].into(),
            cd_tanh_estimate(tau_r, tau_l, tr.times_au[i]).into(),
        ]);
    }
    let tol = 1e-9;
    let (ph_r, ph_l) = (phase_label(pt_phase(&cfg, tol)?), phase_label(pt_phase(&cfg_l, tol)?));
    let cd_t = tr.final_cd();
    let estimate = cd_tanh_estimate(tau_r, tau_l, t_end);
    let mut records = Table::new(&[
        "gamma_ratio", "gamma_au", "cd_final", "residual_r", "residual_l", "tau_r_au", "tau_l_au", "phase_r", "phase_l", "cd_tanh_estimate",
    ]);
    records.push(vec![
        ratio.into(),
        cfg.gamma.into(),
        cd_t.into(),
        tr.residual_r.into(),
        tr.residual_l.into(),
        tau_r.into(),
        tau_l.into(),
        ph_r.into(),
        ph_l.into(),
        estimate.into(),
    ]);
    let summary = json!({
        "kind": "stabilize-cd",
        "gamma_ratio": num(ratio),
        "gamma_au": num(cfg.gamma),
        "gamma_ep_R_au": num(g_r),
        "gamma_ep_L_au": num(g_l),
        "gamma_ep_R_ratio": num(g_r / omega),
        "gamma_ep_L_ratio": num(g_l / omega),
        "phase_R": ph_r,
        "phase_L": ph_l,
        "tau_R_au": num(tau_r),
        "tau_L_au": num(tau_l),
        "tau_R_fs": num(au_to_fs(tau_r)),
        "tau_L_fs": num(au_to_fs(tau_l)),
        "t_end_au": num(t_end),
        "cd_at_t": num(cd_t),
        "cd_tanh_estimate": num(estimate),
        "residual_R": num(tr.residual_r),
        "residual_L": num(tr.residual_l),
    });
    Ok(RunOutput { summary, records, traces: vec![("cd.csv".to_string(), trace)] })
}

fn fiber_config(p: &Params) -> Result<FiberConfig, CliError> {
    let fib = FiberConfig {
        n_core: p.f64("fiber.n_core"),
        n_solution: p.f64("fiber.n_solution"),
        r_core: p.f64("fiber.r_core_m"),
        wavelength: p.f64("fiber.wavelength_m"),
        delta_gamma: p.f64("fiber.delta_gamma_per_m"),
        delta_beta: p.f64("fiber.delta_beta_per_m"),
        phi_t: p.f64("fiber.phi_t_per_m"),
        length: p.f64("fiber.length_m"),
        photoelastic_rg: p.f64("fiber.photoelastic_rg"),
    };
    fib.validate()?;
    Ok(fib)
}

fn solution(p: &Params, ee: f64) -> Result<SolutionConfig, CliError> {
    let sign = if p.str("solution.sign") == "as-printed" { RotationSign::AsPrinted } else { RotationSign::FigureMatched };
    Ok(SolutionConfig::new(ee, p.f64("solution.alpha_per_m"), sign)?)
}

fn input(p: &Params) -> InputPolarization {
    match p.str("run.input") {
        "lcp" => InputPolarization::Lcp,
        "linear" => InputPolarization::Linear(p.f64("run.theta_rad")),
        _ => InputPolarization::Rcp,
    }
}

fn fiber_ctl(p: &Params) -> StepControl {
    StepControl::with_tolerances(p.f64("numerics.rel_tol"), p.f64("numerics.abs_tol"))
}

fn fiber_run(p: &Params) -> Result<RunOutput, CliError> {
    let fib = fiber_config(p)?;
    let sol = solution(p, p.f64("solution.ee"))?;
    let ctl = fiber_ctl(p).with_outputs(p.usize("run.outputs").max(1));
    let tr = propagate_fiber(&fib, &sol, input(p), &ctl)?;
    let twist = lab_twist_rate(&fib, &sol, &tr);
    let mut trace = Table::new(&[
        "z_m", "p", "p_norm", "xi", "re_psi_minus", "im_psi_minus", "re_psi_plus", "im_psi_plus", "lab_twist_rate_per_m",
    ]);
    for i in 0..tr.z.len() {
        trace.push(vec![
            tr.z[i].into(),
            tr.p[i].into(),
            tr.p_norm[i].into(),
            tr.xi[i].into(),
            tr.psi_minus[i].re.into(),
            tr.psi_minus[i].im.into(),
            tr.psi_plus[i].re.into(),
            tr.psi_plus[i].im.into(),
            twist[i].into(),
        ]);
    }
    let (l1, l2) = fiber_eigenvalues(&fib, &sol);
    let eps = fiber_ep_positions(&fib, &sol);
    let period = beating_period(&tr.z, &tr.p);
    let mut records = Table::new(&["ee", "phi_t_per_m", "p_final", "p_norm_final", "xi_final", "phase_class", "beating_period_m"]);
    records.push(vec![
        sol.ee.into(),
        fib.phi_t.into(),
        tr.final_power().into(),
        (*tr.p_norm.last().expect("non-empty")).into(),
        tr.final_ellipticity().into(),
        tr.phase_class.label().into(),
        period.unwrap_or(f64::NAN).into(),
    ]);
    let summary = json!({
        "kind": "fiber-run",
        "phase_class": tr.phase_class.label(),
        "alpha_eff_per_m": num(sol.alpha_eff()),
        "eigenvalues_per_m": [[num(l1.re), num(l1.im)], [num(l2.re), num(l2.im)]],
        "ep_positions": eps.iter().map(|(phi, db)| json!({"phi_t_per_m": num(*phi), "delta_beta_per_m": num(*db)})).collect::<Vec<_>>(),
        "p_final": num(tr.final_power()),
        "p_norm_final": num(*tr.p_norm.last().expect("non-empty")),
        "xi_final": num(tr.final_ellipticity()),
        "beating_period_m": period.map_or(Value::Null, num),
        "mean_lab_twist_rate_per_m": num(twist.iter().sum::<f64>() / twist.len() as f64),
    });
    Ok(RunOutput { summary, records, traces: vec![("fiber.csv".to_string(), trace)] })
}

fn fiber_sensitivity(p: &Params) -> Result<RunOutput, CliError> {
    let fib = fiber_config(p)?;
    let template = solution(p, 0.0)?;
    let (lo, hi, n) = (p.f64("sensitivity.ee_min"), p.f64("sensitivity.ee_max"), p.usize("sensitivity.ee_points"));
    if n < 2 || !(hi > lo) {
        return Err(invalid("sensitivity", "need ee_max > ee_min and at least two points"));
    }
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let observable = if p.str("sensitivity.observable") == "ellipticity" { Observable::Ellipticity } else { Observable::Power };
    let rows = sensitivity(&fib, &template, &grid, observable, input(p), &fiber_ctl(p))?;
    let mut records = Table::new(&["ee", "s", "r", "saturated"]);
    for r in &rows {
        records.push(vec![r.ee.into(), r.s.into(), r.r.into(), r.saturated.into()]);
    }
    let peak = |side: f64| {
        rows.iter()
            .filter(|r| r.ee * side > 0.0 && !r.saturated)
            .max_by(|a, b| a.r.abs().total_cmp(&b.r.abs()))
            .map(|r| json!({"ee": num(r.ee), "abs_r": num(r.r.abs())}))
            .unwrap_or(Value::Null)
    };
    let summary = json!({
        "kind": "fiber-sensitivity",
        "observable": observable.label(),
        "peak_negative_ee": peak(-1.0),
        "peak_positive_ee": peak(1.0),
        "saturated_points": rows.iter().filter(|r| r.saturated).count(),
    });
    Ok(RunOutput { summary, records, traces: Vec::new() })
}

fn mode_solve(p: &Params) -> Result<RunOutput, CliError> {
    let fib = FiberConfig {
        n_core: p.f64("fiber.n_core"),
        n_solution: p.f64("fiber.n_solution"),
        r_core: p.f64("fiber.r_core_m"),
        wavelength: p.f64("fiber.wavelength_m"),
        ..FiberConfig::paper()
    };
    let m = solve_lp01(&fib)?;
    let alpha = alpha_from_solution(
        p.f64("solution.specific_rotation_deg_ml_per_g_dm"),
        p.f64("solution.density_g_per_ml"),
        m.gamma_evan,
    );
    let rb = m.relative_beta(&fib);
    let mut records = Table::new(&[
        "v", "beta_per_m", "relative_beta", "x", "y", "gamma_core", "gamma_evan", "single_mode", "alpha_derived_per_m",
    ]);
    records.push(vec![
        m.v.into(),
        m.beta.into(),
        rb.into(),
        m.x.into(),
        m.y.into(),
        m.gamma_core.into(),
        m.gamma_evan.into(),
        m.single_mode.into(),
        alpha.into(),
    ]);
    let summary = json!({
        "kind": "mode-solve",
        "v": num(m.v),
        "beta_per_m": num(m.beta),
        "relative_beta": num(rb),
        "x": num(m.x),
        "y": num(m.y),
        "gamma_core": num(m.gamma_core),
        "gamma_evan": num(m.gamma_evan),
        "single_mode": m.single_mode,
        "alpha_derived_per_m": num(alpha),
        "alpha_reference_per_m": num(PAPER_ALPHA),
        "alpha_ratio": num(alpha / PAPER_ALPHA),
    });
    Ok(RunOutput { summary, records, traces: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_keys_are_unique_and_unit_suffixed() {
        let dimensionless = [
            "eta", "n_core", "n_solution", "epsilon", "gamma_ratio", "ee", "photoelastic_rg", "radius_scale", "center_shift", "rel_tol", "abs_tol", "tol",
            "ee_min", "ee_max",
        ];
        for kind in Kind::value_variants() {
            let s = kind.schema();
            for (i, f) in s.iter().enumerate() {
                assert!(s[i + 1..].iter().all(|g| g.key != f.key), "{} repeated", f.key);
                if f.ty == Ty::Float {
                    let leaf = f.key.rsplit('.').next().unwrap();
                    let suffixed = ["_au", "_fs", "_m", "_per_m", "_rad", "_g_per_ml", "_g_dm"].iter().any(|u| leaf.ends_with(u));
                    assert!(suffixed || dimensionless.contains(&leaf), "{}", f.key);
                }
            }
        }
    }

    #[test]
    fn kind_names_match_value_enum() {
        for kind in Kind::value_variants() {
            assert_eq!(kind.to_possible_value().unwrap().get_name(), kind.name());
        }
    }
}
