use crate::{
    BellArgs, DecomposeArgs, FarfieldArgs, FringeArgs, FringeKind, FringeMode, PlateArgs, PlateKind, SearchArgs,
    SettingsKind, VerifyArgs,
};
use oamsim_core::bell::exact::{exact_chsh, ExactFringe, ExactSettings, Q};
use oamsim_core::bell::search::CERTIFICATE_TOL;
use oamsim_core::lg::decompose::DecomposeWindow;
use oamsim_core::oracle::{verify_certificate, QuadratureFringe};
use oamsim_core::quadrature::CircleQuadrature;
use oamsim_core::twophoton::half_spiral_fringe;
use oamsim_core::*;
use serde_json::json;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(String),
    /// Oracle checks ran and at least one disagreed.
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "bad input: {m}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<OamError> for CliError {
    fn from(e: OamError) -> Self {
        match e {
            OamError::OracleMismatch { .. } => CliError::Verification(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, value: &serde_json::Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn read_plate(path: &Path) -> CliResult<PhasePlate> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn resolve_plate(args: &PlateArgs) -> CliResult<PhasePlate> {
    if let Some(path) = &args.plate_file {
        return read_plate(path);
    }
    Ok(match args.plate {
        PlateKind::Spiral => PhasePlate::spiral(args.ell, args.alpha)?,
        PlateKind::Step => PhasePlate::step(args.phi, args.alpha)?,
    })
}

fn headline(x: f64) -> String {
    format!("{x:.12}")
}

pub fn fringe(args: &FringeArgs) -> CliResult<String> {
    let plate = resolve_plate(&args.plate)?;
    let quad = CircleQuadrature::default();
    const TOL: f64 = 1e-8;
    let (csv, samples) = match args.mode {
        FringeMode::Overlap => {
            let curve = sample_curve(&plate, args.samples, args.verify.then_some((&quad, TOL)))?;
            (curve.to_csv(), curve.samples)
        }
        FringeMode::Coincidence => {
            let state = TwoPhotonState::new(args.q);
            let fr = coincidence_fringe(&state, &plate, args.samples, args.offset)?;
            if args.verify {
                if args.q != 0 {
                    return Err(CliError::Input("--verify for coincidence fringes needs q = 0".into()));
                }
                let oracle = QuadratureFringe {
                    signal_template: plate.clone(),
                    quad: &quad,
                };
                for &(d, p) in &fr.samples {
                    let want = oracle.probability(args.offset, args.offset + d);
                    if (want - p).abs() > TOL {
                        return Err(CliError::Verification(format!(
                            "coincidence at delta={d}: closed form {p}, quadrature {want}"
                        )));
                    }
                }
            }
            (fr.to_csv(), fr.samples)
        }
    };
    write_file(&args.out, csv.as_bytes())?;
    let min = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    Ok(headline(min))
}

fn resolve_settings(kind: SettingsKind, plate: &PhasePlate, fringe: FringeKind) -> BellSettings {
    match (kind, fringe) {
        (SettingsKind::Paper, _) => BellSettings::paper(),
        (SettingsKind::Polarization, _) | (SettingsKind::Default, FringeKind::Cos2) => BellSettings::polarization(),
        (SettingsKind::Default, FringeKind::Plate) => BellSettings::default_for(plate),
    }
}

/// Exact fringe when the plate's fringe has rational coefficients.
fn exact_fringe(plate: &PhasePlate) -> Option<ExactFringe> {
    match plate {
        PhasePlate::Spiral { .. } => {
            let lambda = plate.decomposition()?.lambda;
            if lambda == 0.5 {
                Some(ExactFringe::HalfSpiral)
            } else if lambda == 0.0 {
                Some(ExactFringe::Constant(Q::from_integer(1)))
            } else {
                None
            }
        }
        PhasePlate::Step { phi, .. } => [(-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1)]
            .into_iter()
            .map(|(n, d)| Q::new(n, d))
            .find(|c| (phi.cos() - *c.numer() as f64 / *c.denom() as f64).abs() < 1e-12)
            .map(|cos_phi| ExactFringe::Step { cos_phi }),
        PhasePlate::BinarySectors { .. } => None,
    }
}

fn exact_settings(s: &BellSettings) -> Option<ExactSettings> {
    if *s == BellSettings::paper() {
        Some(ExactSettings::paper())
    } else if *s == BellSettings::polarization() {
        Some(ExactSettings::polarization())
    } else {
        None
    }
}

pub fn bell(args: &BellArgs) -> CliResult<String> {
    let plate = resolve_plate(&args.plate)?;
    let mut settings = resolve_settings(args.settings, &plate, args.fringe);
    if let Some(perp) = args.perp {
        settings = BellSettings::new(
            settings.alpha1,
            settings.alpha1p,
            settings.alpha2,
            settings.alpha2p,
            perp,
        )?;
    }
    let fringe = match args.fringe {
        FringeKind::Plate => ClosedFringe::for_plate(&plate),
        FringeKind::Cos2 => ClosedFringe::Cos2,
    };
    let result = chsh_s(&fringe, &settings)?;
    let mut doc = serde_json::to_value(&result).expect("bell result serializes");
    if let (FringeKind::Plate, Some(f), Some(st)) = (args.fringe, exact_fringe(&plate), exact_settings(&settings)) {
        let exact = exact_chsh(f, &st)?;
        doc["S_exact"] = json!(exact.s.to_string());
        doc["exact"] = serde_json::to_value(&exact).expect("exact result serializes");
    }
    doc["plate"] = serde_json::to_value(&plate).expect("plate serializes");
    write_json(&args.out, &doc)?;
    Ok(headline(result.s))
}

pub fn search(args: &SearchArgs) -> CliResult<String> {
    let init = args.init.as_deref().map(read_plate).transpose()?;
    let settings = match (args.settings, &init) {
        (SettingsKind::Paper, _) | (SettingsKind::Default, None) => BellSettings::paper(),
        (SettingsKind::Polarization, _) => BellSettings::polarization(),
        (SettingsKind::Default, Some(p)) => BellSettings::default_for(p),
    };
    let mut cfg = SearchConfig::new(args.sectors, args.phi, settings, args.budget);
    cfg.seed = args.seed;
    cfg.starts = args.starts;
    if let Some(plate) = &init {
        let sectors = match plate {
            PhasePlate::Spiral { .. } => {
                return Err(CliError::Input("--init needs a step or binary plate".into()));
            }
            PhasePlate::Step { phi, .. } | PhasePlate::BinarySectors { phi, .. } => {
                cfg.phi = *phi;
                plate.delayed_region().expect("sector plate")
            }
        };
        cfg.init = Some(sectors);
    }
    let result = search_max_s(&cfg)?;
    let mut doc = serde_json::to_value(&result).expect("search result serializes");
    doc["config"] = json!({
        "sectors": cfg.init.as_ref().map_or(args.sectors, |s| s.arcs().len()),
        "phi": cfg.phi,
        "budget": cfg.budget,
        "seed": cfg.seed,
        "starts": cfg.starts,
    });
    if result.best_s.abs() < 1e-12 {
        doc["note"] = json!("flat fringe: every correlation vanishes");
    }
    write_json(&args.out, &doc)?;
    Ok(headline(result.best_s))
}

pub fn decompose(args: &DecomposeArgs) -> CliResult<String> {
    let plate = PhasePlate::spiral(args.ell, 0.0)?;
    let input = lg::LgMode::fundamental();
    let d = if args.l_half_width.is_some() || args.p_max.is_some() {
        let mut w = DecomposeWindow::around(args.ell);
        let c = args.ell.round() as i64;
        if let Some(h) = args.l_half_width {
            if h < 0 {
                return Err(CliError::Input("--l-half-width must be non-negative".into()));
            }
            w.l_min = c - h;
            w.l_max = c + h;
        }
        if let Some(p) = args.p_max {
            w.p_max = p;
        }
        decompose_plate_output(&plate, &input, w, args.target)?
    } else {
        decompose_auto(&plate, &input, args.target)?
    };
    write_file(&args.out, d.to_csv().as_bytes())?;
    Ok(match d.count_at_target {
        Some(n) => n.to_string(),
        None => format!("incomplete ({})", headline(d.achieved_power)),
    })
}

pub fn farfield(args: &FarfieldArgs) -> CliResult<String> {
    let plate = PhasePlate::spiral(args.ell, 0.0)?;
    let image = far_field(&plate, &lg::LgMode::fundamental(), args.grid, args.extent)?;
    let file = File::create(&args.out).map_err(|e| CliError::Io(format!("{}: {e}", args.out.display())))?;
    let mut w = BufWriter::new(file);
    image
        .write_pgm(&mut w)
        .and_then(|()| w.flush())
        .map_err(|e| CliError::Io(format!("{}: {e}", args.out.display())))?;
    write_json(&args.out.with_extension("json"), &image.sidecar(&plate))?;
    Ok(headline(image.metrics.asymmetry))
}

pub fn verify(args: &VerifyArgs) -> CliResult<String> {
    if !(args.tolerance > 0.0) {
        return Err(CliError::Input(format!(
            "tolerance {} must be positive",
            args.tolerance
        )));
    }
    let tol = args.tolerance;
    let quad = CircleQuadrature::default();
    let mut reports: Vec<OracleReport> = Vec::new();

    let alphas: Vec<f64> = (0..16).map(|k| -PI + 2.0 * PI * k as f64 / 16.0 + 0.1).collect();
    let mut overlap_plates = Vec::new();
    for ell in [0.0, 0.25, 0.3, 0.5, 1.5, 2.5] {
        overlap_plates.push(PhasePlate::spiral(ell, 0.0)?);
    }
    for phi in [0.0, FRAC_PI_2, 2.0 * PI / 3.0, PI] {
        overlap_plates.push(PhasePlate::step(phi, 0.0)?);
    }
    overlap_plates.push(PhasePlate::binary(PI, &[(0.3, 1.2), (2.0, 4.5)], 0.0)?);
    for plate in &overlap_plates {
        for &a in alphas.iter().chain([PI, -2.0].iter()) {
            reports.push(verify_overlap(plate, a, tol, &quad));
        }
    }

    // coincidence fringe samples against integrated projectors
    let spiral = PhasePlate::spiral(0.5, 0.0)?;
    let oracle = QuadratureFringe {
        signal_template: spiral.clone(),
        quad: &quad,
    };
    for k in 0..12 {
        let (x, d) = (0.37 * k as f64, 2.0 * PI * k as f64 / 12.0);
        reports.push(OracleReport::new(
            format!("half-spiral coincidence, delta={d:.6}"),
            half_spiral_fringe(d),
            oracle.probability(x, x + d),
            tol,
            quad.cells(),
        ));
    }

    let bell_cases = [
        (PhasePlate::spiral(0.5, 0.0)?, BellSettings::paper()),
        (PhasePlate::spiral(1.5, 0.0)?, BellSettings::paper()),
        (PhasePlate::step(PI, 0.0)?, BellSettings::polarization()),
        (PhasePlate::step(FRAC_PI_2, 0.0)?, BellSettings::paper()),
    ];
    for (plate, settings) in &bell_cases {
        reports.push(verify_bell(plate, settings, tol, &quad)?);
    }

    // the S = 4 mask found by the default search
    let mut cfg = SearchConfig::new(6, PI, BellSettings::paper(), 20_000);
    cfg.seed = 0;
    let found = search_max_s(&cfg)?;
    reports.push(verify_certificate(
        &found.best_mask,
        &found.settings,
        CERTIFICATE_TOL.max(tol),
        &quad,
    )?);

    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.json_line());
        text.push('\n');
    }
    write_file(&args.out, text.as_bytes())?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        println!("{failed}");
        return Err(CliError::Verification(format!(
            "{failed} of {} checks failed, see {}",
            reports.len(),
            args.out.display()
        )));
    }
    Ok(failed.to_string())
}
