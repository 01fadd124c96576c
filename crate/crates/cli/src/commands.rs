//! Subcommand implementations.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use serde::Serialize;

use dyniso::design::{minimize_thomson, morphology_sweep, SweepRecord};
use dyniso::ellipsoid::{
    max_disturbance_bound, min_energy_torque, shape_matrix, stability_margin, Ellipsoid,
};
use dyniso::isotropy::{acceleration_cloud, report_from_parts, AccelerationCloud, IsotropyReport};
use dyniso::morphology::{build_acceleration_map, AccelerationMap, Family, Morphology};
use dyniso::sampling::{sample_directions, DirectionSet};

use crate::manifest::{content_hash, RunManifest};
use crate::output::{fmt_f64, to_json};
use crate::{Cli, CliError, CloudFormat, Command};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze { morphology } => cmd_analyze(cli, morphology),
        Command::Cloud { morphology, format } => cmd_cloud(cli, morphology, *format),
        Command::Design { legs, restarts } => cmd_design(cli, *legs, *restarts),
        Command::Sweep {
            leg_counts,
            count_per,
            emit_morphologies,
        } => cmd_sweep(cli, leg_counts, *count_per, *emit_morphologies),
        Command::Margin { morphology, accel } => cmd_margin(cli, morphology, accel),
        Command::Effort { morphology, accel } => cmd_effort(cli, morphology, accel),
        Command::Sequence { list } => cmd_sequence(cli, list),
    }
}

// ---------------------------------------------------------------------------
// shared plumbing

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn load_morphology(path: &Path) -> Result<(Morphology, String), CliError> {
    let bytes = read_file(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
    let morph = Morphology::from_json_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((morph, content_hash(text.as_bytes())))
}

fn build_map(cli: &Cli, morph: &Morphology) -> Result<AccelerationMap, CliError> {
    Ok(build_acceleration_map(morph)?.with_paper_compat(cli.paper_compat))
}

fn directions(cli: &Cli) -> Result<DirectionSet, CliError> {
    Ok(sample_directions(
        cli.samples as usize,
        cli.sampler.to_core(),
        cli.seed,
    )?)
}

fn global_flags(cli: &Cli) -> BTreeMap<String, String> {
    let mut flags = BTreeMap::new();
    flags.insert("samples".into(), cli.samples.to_string());
    flags.insert("sampler".into(), cli.sampler.as_flag_value().into());
    flags.insert("seed".into(), cli.seed.to_string());
    flags.insert("paper_compat".into(), cli.paper_compat.to_string());
    flags.insert("no_timestamp".into(), cli.no_timestamp.to_string());
    if let Some(out) = &cli.out {
        flags.insert("out".into(), out.display().to_string());
    }
    flags
}

fn manifest(cli: &Cli, subcommand: &str, flags: BTreeMap<String, String>) -> RunManifest {
    RunManifest::new(subcommand, flags, !cli.no_timestamp)
}

/// Reports print to stdout unless `--out` was given.
fn emit_report(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// File artifacts demand an explicit destination; the manifest sits beside
/// them as `<name>.manifest.json`.
fn artifact_out<'a>(cli: &'a Cli, what: &str) -> Result<&'a Path, CliError> {
    cli.out
        .as_deref()
        .ok_or_else(|| CliError::Input(format!("{what} requires --out PATH")))
}

fn write_manifest_sidecar(out: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    write_file(&out.with_file_name(name), to_json(manifest).as_bytes())
}

fn parse_accel(text: &str) -> Result<Vector3<f64>, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!(
            "--accel expects three comma-separated numbers, got `{text}`"
        )));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .parse::<f64>()
            .map_err(|_| CliError::Input(format!("--accel component `{part}` is not a number")))?;
        if !slot.is_finite() {
            return Err(CliError::Input(format!(
                "--accel component `{part}` is not finite"
            )));
        }
    }
    Ok(Vector3::from(v))
}

fn family_note(family: Family) -> Option<&'static str> {
    match family {
        Family::Tensegrity => Some(
            "tensegrity cables are folded into bilateral-equivalent columns \
             (optimal grounding); magnitudes are upper bounds",
        ),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// analyze

#[derive(Serialize)]
struct AnalyzeArtifact {
    name: String,
    family: String,
    #[serde(flatten)]
    report: IsotropyReport,
    /// Condition number λ₁/λ₃; null when λ₃ = 0.
    kappa: Option<f64>,
    /// Rows are the unit eigenvectors matching `eigenvalues`.
    eigenvectors: [[f64; 3]; 3],
    /// Shape matrix Q, row-major.
    q: [[f64; 3]; 3],
    /// Worst-case disturbance bound √λ₃ (m/s², model-relative).
    disturbance_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
    manifest: RunManifest,
}

fn ellipsoid_rows(ell: &Ellipsoid) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let mut vectors = [[0.0; 3]; 3];
    for (i, row) in vectors.iter_mut().enumerate() {
        let v = ell.eigenvector(i);
        *row = [v.x, v.y, v.z];
    }
    let q = ell.q();
    let mut q_rows = [[0.0; 3]; 3];
    for (r, row) in q_rows.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = q[(r, c)];
        }
    }
    (vectors, q_rows)
}

fn cmd_analyze(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let (morph, hash) = load_morphology(path)?;
    let map = build_map(cli, &morph)?;
    let dirs = directions(cli)?;
    let cloud = acceleration_cloud(&map, &dirs)?;
    let ell = shape_matrix(&map);
    let report = report_from_parts(&cloud, &ell);

    let mut flags = global_flags(cli);
    flags.insert("morphology".into(), path.display().to_string());
    let mut manifest = manifest(cli, "analyze", flags);
    manifest.input_hash = Some(hash);

    let (eigenvectors, q) = ellipsoid_rows(&ell);
    let artifact = AnalyzeArtifact {
        name: morph.name.clone(),
        family: morph.family.to_string(),
        kappa: ell.kappa().is_finite().then(|| ell.kappa()),
        eigenvectors,
        q,
        disturbance_bound: max_disturbance_bound(&ell).bound,
        note: family_note(morph.family),
        report,
        manifest,
    };
    emit_report(cli, &to_json(&artifact))
}

// ---------------------------------------------------------------------------
// cloud

fn cloud_csv(cloud: &AccelerationCloud) -> String {
    let mut text = String::from("ux,uy,uz,a_max,a_norm\n");
    for ((u, &mag), &norm) in cloud
        .directions()
        .directions()
        .iter()
        .zip(cloud.magnitudes())
        .zip(cloud.normalized())
    {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(u.x),
            fmt_f64(u.y),
            fmt_f64(u.z),
            fmt_f64(mag),
            fmt_f64(norm)
        ));
    }
    text
}

/// Vertex position is the direction scaled by its normalized magnitude; the
/// scalar `a_norm` rides along for color mapping.
fn cloud_ply(cloud: &AccelerationCloud) -> String {
    let count = cloud.directions().count();
    let mut text = format!(
        "ply\nformat ascii 1.0\ncomment dyniso acceleration cloud\n\
         element vertex {count}\nproperty double x\nproperty double y\n\
         property double z\nproperty double a_norm\nend_header\n"
    );
    for (u, &norm) in cloud
        .directions()
        .directions()
        .iter()
        .zip(cloud.normalized())
    {
        text.push_str(&format!(
            "{} {} {} {}\n",
            fmt_f64(u.x * norm),
            fmt_f64(u.y * norm),
            fmt_f64(u.z * norm),
            fmt_f64(norm)
        ));
    }
    text
}

fn cmd_cloud(cli: &Cli, path: &Path, format: CloudFormat) -> Result<(), CliError> {
    let out = artifact_out(cli, "cloud")?.to_path_buf();
    let (morph, hash) = load_morphology(path)?;
    let map = build_map(cli, &morph)?;
    let dirs = directions(cli)?;
    let cloud = acceleration_cloud(&map, &dirs)?;

    let body = match format {
        CloudFormat::Csv => cloud_csv(&cloud),
        CloudFormat::Ply => cloud_ply(&cloud),
    };
    write_file(&out, body.as_bytes())?;

    let mut flags = global_flags(cli);
    flags.insert("morphology".into(), path.display().to_string());
    flags.insert(
        "format".into(),
        match format {
            CloudFormat::Csv => "csv".into(),
            CloudFormat::Ply => "ply".into(),
        },
    );
    let mut manifest = manifest(cli, "cloud", flags);
    manifest.input_hash = Some(hash);
    write_manifest_sidecar(&out, &manifest)
}

// ---------------------------------------------------------------------------
// design

fn cmd_design(cli: &Cli, legs: usize, restarts: usize) -> Result<(), CliError> {
    if legs < 3 {
        return Err(CliError::Input(format!(
            "design needs at least 3 legs, got {legs}"
        )));
    }
    let out = artifact_out(cli, "design")?.to_path_buf();
    let set = minimize_thomson(legs, restarts, cli.seed, 1e-12)?;
    let morph = Morphology::radial_legs(format!("thomson-{legs}"), &set.points(), 1.0, 1.0);
    write_file(&out, to_json(&morph).as_bytes())?;

    let mut flags = global_flags(cli);
    flags.insert("legs".into(), legs.to_string());
    flags.insert("restarts".into(), restarts.to_string());
    let mut manifest = manifest(cli, "design", flags);
    manifest
        .metrics
        .insert("thomson_energy".into(), set.energy());
    write_manifest_sidecar(&out, &manifest)
}

// ---------------------------------------------------------------------------
// sweep

fn sweep_csv(records: &[SweepRecord], files: &[String]) -> String {
    let mut text =
        String::from("leg_count,variant_index,seed,spread,eta,eta_ellipsoid,thomson_energy,file\n");
    for (record, file) in records.iter().zip(files) {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            record.leg_count,
            record.variant_index,
            record.seed,
            fmt_f64(record.spread),
            fmt_f64(record.eta),
            fmt_f64(record.eta_ellipsoid),
            fmt_f64(record.thomson_energy),
            file
        ));
    }
    text
}

fn cmd_sweep(
    cli: &Cli,
    leg_counts: &[usize],
    count_per: usize,
    emit_morphologies: bool,
) -> Result<(), CliError> {
    let out = artifact_out(cli, "sweep")?.to_path_buf();
    let dirs = directions(cli)?;
    let records = morphology_sweep(leg_counts, count_per, cli.seed, &dirs)?;

    let mut files = vec![String::new(); records.len()];
    if emit_morphologies {
        let stem = out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "sweep".into());
        let dir_name = format!("{stem}_morphologies");
        for (record, file) in records.iter().zip(&mut files) {
            let name = format!(
                "leg{}_var{:04}.json",
                record.leg_count, record.variant_index
            );
            let rel: PathBuf = [dir_name.as_str(), name.as_str()].iter().collect();
            write_file(&out.with_file_name(&rel), to_json(&record.morphology).as_bytes())?;
            *file = rel.display().to_string();
        }
    }
    write_file(&out, sweep_csv(&records, &files).as_bytes())?;

    let mut flags = global_flags(cli);
    flags.insert(
        "leg_counts".into(),
        leg_counts
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    flags.insert("count_per".into(), count_per.to_string());
    flags.insert("emit_morphologies".into(), emit_morphologies.to_string());
    let manifest = manifest(cli, "sweep", flags);
    write_manifest_sidecar(&out, &manifest)
}

// ---------------------------------------------------------------------------
// margin / effort

#[derive(Serialize)]
struct MarginArtifact {
    morphology: String,
    input_hash: String,
    a_req: [f64; 3],
    margin: f64,
    quadratic_form: f64,
    feasible: bool,
    manifest: RunManifest,
}

fn cmd_margin(cli: &Cli, path: &Path, accel: &str) -> Result<(), CliError> {
    let a_req = parse_accel(accel)?;
    let (morph, hash) = load_morphology(path)?;
    let map = build_map(cli, &morph)?;
    let report = stability_margin(&shape_matrix(&map), &a_req)?;

    let mut flags = global_flags(cli);
    flags.insert("morphology".into(), path.display().to_string());
    flags.insert("accel".into(), accel.to_string());
    let artifact = MarginArtifact {
        morphology: morph.name.clone(),
        input_hash: hash.clone(),
        a_req: [a_req.x, a_req.y, a_req.z],
        margin: report.margin,
        quadratic_form: report.quadratic_form,
        feasible: report.feasible,
        manifest: {
            let mut m = manifest(cli, "margin", flags);
            m.input_hash = Some(hash);
            m
        },
    };
    emit_report(cli, &to_json(&artifact))
}

#[derive(Serialize)]
struct EffortArtifact {
    morphology: String,
    input_hash: String,
    a_des: [f64; 3],
    torque: Vec<f64>,
    /// Exact minimum effort ‖τ*‖².
    effort: f64,
    /// Ellipsoidal approximation Σ α_i²/λ_i (exact only under unit limits).
    effort_ellipsoid: f64,
    decomposition: [f64; 3],
    residual: f64,
    saturated: Vec<usize>,
    manifest: RunManifest,
}

fn cmd_effort(cli: &Cli, path: &Path, accel: &str) -> Result<(), CliError> {
    let a_des = parse_accel(accel)?;
    let (morph, hash) = load_morphology(path)?;
    let map = build_map(cli, &morph)?;
    let report = min_energy_torque(&map, &a_des)?;

    let mut flags = global_flags(cli);
    flags.insert("morphology".into(), path.display().to_string());
    flags.insert("accel".into(), accel.to_string());
    let artifact = EffortArtifact {
        morphology: morph.name.clone(),
        input_hash: hash.clone(),
        a_des: [a_des.x, a_des.y, a_des.z],
        effort_ellipsoid: report.decomposition.iter().sum(),
        torque: report.torque,
        effort: report.effort,
        decomposition: report.decomposition,
        residual: report.residual,
        saturated: report.saturated,
        manifest: {
            let mut m = manifest(cli, "effort", flags);
            m.input_hash = Some(hash);
            m
        },
    };
    emit_report(cli, &to_json(&artifact))
}

// ---------------------------------------------------------------------------
// sequence

fn cmd_sequence(cli: &Cli, list: &Path) -> Result<(), CliError> {
    let out = artifact_out(cli, "sequence")?.to_path_buf();
    let text = String::from_utf8(read_file(list)?)
        .map_err(|_| CliError::Input(format!("{} is not UTF-8", list.display())))?;
    let base = list.parent().unwrap_or_else(|| Path::new(""));

    let dirs = directions(cli)?;
    let mut rows = String::from("index,name,eta,eta_ellipsoid\n");
    let mut index = 0usize;
    for line in text.lines() {
        let entry = line.trim();
        if entry.is_empty() || entry.starts_with('#') {
            continue;
        }
        let path = base.join(entry);
        let (morph, _) = load_morphology(&path)?;
        let map = build_map(cli, &morph)?;
        let report = dyniso::isotropy::isotropy_score(&map, &dirs)?;
        rows.push_str(&format!(
            "{},{},{},{}\n",
            index,
            morph.name,
            fmt_f64(report.eta),
            fmt_f64(report.eta_ellipsoid)
        ));
        index += 1;
    }
    if index == 0 {
        return Err(CliError::Input(format!(
            "{} lists no morphology files",
            list.display()
        )));
    }
    write_file(&out, rows.as_bytes())?;

    let mut flags = global_flags(cli);
    flags.insert("list".into(), list.display().to_string());
    let mut manifest = manifest(cli, "sequence", flags);
    manifest.input_hash = Some(content_hash(text.as_bytes()));
    write_manifest_sidecar(&out, &manifest)
}
