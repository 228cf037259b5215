use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sparse_gft::{
    auc, classic_gft_basis, fit_detector, generate_synthetic, inject_anomalies, laplacian,
    pca_baseline_detector, score, sparse_gft, Detector, DetectorConfig, GftBasis, GraphSource,
};

use crate::args::*;
use crate::error::CliError;
use crate::io::*;

/// Record of a run: enough to repeat it and to check the repeat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    #[serde(flatten)]
    pub run: Command,
    pub seed: Option<u64>,
    /// Input role to SHA-256 of the file contents.
    pub inputs: BTreeMap<String, String>,
    /// Output file name to SHA-256 of the bytes written.
    pub outputs: BTreeMap<String, String>,
}

struct Artifacts {
    inputs: BTreeMap<String, String>,
    outputs: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    fn new() -> Self {
        Artifacts {
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    fn read(&mut self, role: &str, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = read_bytes(path)?;
        self.inputs.insert(role.to_owned(), sha256_hex(&bytes));
        Ok(bytes)
    }

    fn emit(&mut self, name: &str, bytes: impl Into<Vec<u8>>) {
        self.outputs.push((name.to_owned(), bytes.into()));
    }
}

/// Where the manifest of a command lands.
pub fn manifest_path(cmd: &Command) -> PathBuf {
    match cmd {
        Command::Detect(a) => a.out.join("manifest.json"),
        other => {
            let mut s = other.out().as_os_str().to_owned();
            s.push(".manifest.json");
            PathBuf::from(s)
        }
    }
}

fn output_path(cmd: &Command, name: &str) -> PathBuf {
    match cmd {
        Command::Detect(a) => a.out.join(name),
        other => other.out().to_path_buf(),
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs a command, writes its outputs and manifest, and returns the manifest.
pub fn execute(mut cmd: Command) -> Result<Manifest, CliError> {
    if let Command::Replay(args) = cmd {
        return replay(&args);
    }
    for p in cmd.paths_mut() {
        *p = std::path::absolute(&*p).map_err(|e| CliError::input(p.clone(), e.to_string()))?;
    }
    let mut art = Artifacts::new();
    match &mut cmd {
        Command::Laplacian(a) => run_laplacian(a, &mut art)?,
        Command::Gft(a) => run_gft(a, &mut art)?,
        Command::Synth(a) => run_synth(a, &mut art)?,
        Command::Inject(a) => run_inject(a, &mut art)?,
        Command::Detect(a) => run_detect(a, &mut art)?,
        Command::Replay(_) => unreachable!(),
    }

    if let Command::Detect(a) = &cmd {
        std::fs::create_dir_all(&a.out).map_err(|source| CliError::Write {
            path: a.out.clone(),
            source,
        })?;
    }
    let mut outputs = BTreeMap::new();
    for (name, bytes) in &art.outputs {
        write(&output_path(&cmd, name), bytes)?;
        outputs.insert(name.clone(), sha256_hex(bytes));
    }
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_owned(),
        seed: cmd.seed(),
        run: cmd,
        inputs: art.inputs,
        outputs,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write(&manifest_path(&manifest.run), text.as_bytes())?;
    Ok(manifest)
}

fn replay(args: &ReplayArgs) -> Result<Manifest, CliError> {
    let bytes = read_bytes(&args.manifest)?;
    let recorded: Manifest = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::input(&args.manifest, e.to_string()))?;
    let mut cmd = recorded.run.clone();
    if let Some(out) = &args.out {
        cmd.set_out(out.clone());
    }
    for (role, path) in input_paths(&cmd) {
        let digest = sha256_hex(&read_bytes(&path)?);
        if recorded.inputs.get(role) != Some(&digest) {
            return Err(CliError::input(
                path,
                format!("input `{role}` changed since the manifest was written"),
            ));
        }
    }
    let fresh = execute(cmd)?;
    if fresh.outputs != recorded.outputs {
        let differing: Vec<&str> = recorded
            .outputs
            .iter()
            .filter(|(k, v)| fresh.outputs.get(*k) != Some(v))
            .map(|(k, _)| k.as_str())
            .collect();
        return Err(CliError::Replay(differing.join(", ")));
    }
    Ok(fresh)
}

fn input_paths(cmd: &Command) -> Vec<(&'static str, PathBuf)> {
    let mut v = Vec::new();
    match cmd {
        Command::Laplacian(a) => v.push(("graph", a.graph.graph.clone())),
        Command::Gft(a) => v.push(("graph", a.graph.graph.clone())),
        Command::Synth(_) | Command::Replay(_) => {}
        Command::Inject(a) => {
            v.push(("input", a.input.clone()));
            v.extend(a.reference.clone().map(|p| ("reference", p)));
        }
        Command::Detect(a) => {
            v.push(("train", a.train.clone()));
            v.push(("test", a.test.clone()));
            v.extend(a.graph.clone().map(|p| ("graph", p)));
        }
    }
    v
}

fn run_laplacian(a: &mut LaplacianArgs, art: &mut Artifacts) -> Result<(), CliError> {
    let bytes = art.read("graph", &a.graph.graph)?;
    let g = parse_graph(&a.graph.graph, &bytes, a.graph.vertices)?;
    a.graph.vertices = Some(g.vertex_count());
    let phi = laplacian(&g, a.kind.into());
    art.emit("laplacian.csv", matrix_csv(phi.view()));
    Ok(())
}

fn basis_json(basis: &GftBasis, kind: Kind, mode: Mode, ridge: f64, lasso: f64) -> Value {
    let components: Vec<Value> = (0..basis.k())
        .map(|m| {
            json!({
                "index": m,
                "quadratic_form": basis.quadratic_forms()[m],
                "degenerate": basis.degenerate()[m],
                "loadings": basis.component(m).to_vec(),
            })
        })
        .collect();
    let diagnostics = match basis.diagnostics() {
        Some(d) => json!({
            "solver": "alternating",
            "outer_iterations": d.outer_iterations,
            "objective": d.objective,
            "objective_history": d.objective_history,
            "fista_iterations": d.fista_iterations,
            "converged": d.converged,
            "orthonormal": basis.orthonormal(),
        }),
        None => json!({ "solver": "jacobi", "orthonormal": basis.orthonormal() }),
    };
    json!({
        "p": basis.p(),
        "k": basis.k(),
        "kind": kind,
        "mode": mode,
        "ridge": ridge,
        "lasso": lasso,
        "components": components,
        "diagnostics": diagnostics,
    })
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s.into_bytes()
}

fn run_gft(a: &mut GftArgs, art: &mut Artifacts) -> Result<(), CliError> {
    let bytes = art.read("graph", &a.graph.graph)?;
    let g = parse_graph(&a.graph.graph, &bytes, a.graph.vertices)?;
    a.graph.vertices = Some(g.vertex_count());
    let phi = laplacian(&g, a.kind.into());
    let json = match a.mode {
        Mode::Classic => {
            let basis = classic_gft_basis(&phi)?;
            a.solver.k = Some(basis.k());
            basis_json(&basis, a.kind, a.mode, 0.0, 0.0)
        }
        Mode::Sparse => {
            let config = a.solver.config();
            a.solver.k = Some(config.resolve_k(g.vertex_count())?);
            let basis = sparse_gft(&phi, &config)?;
            basis_json(&basis, a.kind, a.mode, a.solver.ridge, a.solver.lasso)
        }
    };
    art.emit("basis.json", pretty(&json));
    Ok(())
}

fn run_synth(a: &mut SynthArgs, art: &mut Artifacts) -> Result<(), CliError> {
    let data = generate_synthetic(a.seed, a.rows)?;
    art.emit("signals.csv", signals_csv(&data, None));
    Ok(())
}

fn run_inject(a: &mut InjectArgs, art: &mut Artifacts) -> Result<(), CliError> {
    let bytes = art.read("input", &a.input)?;
    let data = parse_signals(&a.input, &bytes)?;
    let std = match &a.reference {
        Some(path) => {
            let bytes = art.read("reference", path)?;
            parse_signals(path, &bytes)?.column_std()
        }
        None => data.column_std(),
    };
    let labeled = inject_anomalies(
        &data,
        std.as_slice().expect("contiguous"),
        a.seed,
        a.count,
        a.magnitude,
    )?;
    art.emit(
        "labeled.csv",
        signals_csv(&labeled.signals, Some(&labeled.labels)),
    );
    Ok(())
}

fn run_detect(a: &mut DetectArgs, art: &mut Artifacts) -> Result<(), CliError> {
    let bytes = art.read("train", &a.train)?;
    let train = parse_signals(&a.train, &bytes)?;
    let bytes = art.read("test", &a.test)?;
    let test = parse_labeled(&a.test, &bytes)?;
    let p = train.sources();
    if test.signals.sources() != p {
        return Err(sparse_gft::Error::DimensionMismatch {
            expected: p,
            found: test.signals.sources(),
        }
        .into());
    }
    let positives = test.labels.iter().filter(|&&l| l).count();
    if positives == 0 || positives == test.labels.len() {
        return Err(sparse_gft::Error::DegenerateLabels.into());
    }

    let graph = match &a.graph {
        Some(path) => {
            let bytes = art.read("graph", path)?;
            GraphSource::Given(parse_graph(path, &bytes, Some(p))?)
        }
        None => GraphSource::Auto { epsilon: a.epsilon },
    };
    let config = DetectorConfig {
        graph,
        kind: a.kind.into(),
        solver: a.solver.config(),
        hf_quantile: a.hf_quantile,
    };
    a.solver.k = Some(config.solver.resolve_k(p)?);
    let sparse = fit_detector(&train, &config)?;
    let Detector::Spectral(spectral) = &sparse else {
        unreachable!("fit_detector returns the spectral detector")
    };
    let high_freq = spectral.high_freq.clone();
    let rank = *a
        .pca_components
        .get_or_insert_with(|| p.saturating_sub(high_freq.len()).max(1));
    let pca = pca_baseline_detector(&train, rank)?;

    let sparse_scores = score(&sparse, &test.signals)?;
    let pca_scores = score(&pca, &test.signals)?;
    let sparse_auc = auc(&sparse_scores, &test.labels)?;
    let pca_auc = auc(&pca_scores, &test.labels)?;

    let mut csv = String::from("row,label,sparse_score,pca_score\n");
    for i in 0..test.labels.len() {
        csv.push_str(&format!(
            "{i},{},{},{}\n",
            u8::from(test.labels[i]),
            sparse_scores[i],
            pca_scores[i]
        ));
    }
    art.emit("scores.csv", csv);
    art.emit(
        "auc.json",
        pretty(&json!({
            "sparse_auc": sparse_auc,
            "pca_auc": pca_auc,
            "pca_components": rank,
            "high_frequency_components": high_freq,
            "rows": test.labels.len(),
            "anomalies": positives,
        })),
    );
    art.emit(
        "basis.json",
        pretty(&basis_json(
            &spectral.basis,
            a.kind,
            Mode::Sparse,
            a.solver.ridge,
            a.solver.lasso,
        )),
    );
    Ok(())
}
