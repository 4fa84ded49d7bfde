//! `netmix` command-line workflow.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage, 3 configuration,
//! 4 file access, 5 invalid data, 6 archive/data checksum mismatch,
//! 7 unreadable draw archive.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use netmix::io::archive::{export_draws_csv, export_trace_csv, read_archive, write_archive};
use netmix::io::config::{parse_config, render_config, RunConfig};
use netmix::io::dataset::{load_dataset, read_text, write_dataset, Dataset, NetworkFormat};
use netmix::io::report;
use netmix::io::write_atomic;
use netmix::model::{sample_cohort_with_components, MixtureParameters};
use netmix::network::{EdgeIndexMap, Hemisphere, NetworkObservation, NodeInfo, NodeMetadata};
use netmix::priors::sample_prior;
use netmix::sampler::{data_checksum, run_chain, PosteriorDraws};
use netmix::testing::classify::{evaluate_classifier, ClassificationResult, Holdout};
use netmix::testing::fisher::{fisher_baseline, FisherBaseline};
use netmix::testing::TestReport;
use netmix::Error;

#[derive(Parser)]
#[command(name = "netmix", version, about = "Compare populations of binary networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads for the sampler (results do not depend on this).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NetFormat {
    Csv,
    EdgeList,
}

#[derive(Clone, Copy, ValueEnum)]
enum DrawFormat {
    /// Binary archive only.
    Binary,
    /// Binary archive plus a per-draw CSV export.
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a ground truth from the prior and a cohort from it.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "csv")]
        format: NetFormat,
    },
    /// Run the sampler and write a draw archive.
    Fit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_enum, default_value = "binary")]
        format: DrawFormat,
    },
    /// Global and edge-wise tests from a draw archive.
    Test {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        archive: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        cutoff: Option<f64>,
    },
    /// Class probabilities for the subjects of a manifest.
    Predict {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        archive: PathBuf,
        /// Subjects the archive was fitted to, when scoring new subjects.
        #[arg(long)]
        train_manifest: Option<PathBuf>,
    },
    /// Markdown summary of the outputs in a directory.
    Report {
        /// Directory holding `test_report.json` and friends.
        #[arg(long, default_value = ".")]
        input: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Number of edges listed.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    Other = 1,
    Config = 3,
    Io = 4,
    Data = 5,
    Checksum = 6,
    Archive = 7,
}

struct Failure {
    class: Class,
    error: Error,
}

fn innermost(e: &Error) -> &Error {
    match e {
        Error::InFile { source, .. } => innermost(source),
        e => e,
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let class = match innermost(&error) {
            Error::Io { .. } => Class::Io,
            Error::ChecksumMismatch { .. } => Class::Checksum,
            Error::Archive(_) => Class::Archive,
            Error::UnknownConfigKey { .. }
            | Error::InvalidHyperParameter { .. }
            | Error::InvalidSamplerConfig(_)
            | Error::InvalidTestSetting(_) => Class::Config,
            Error::TooLargeForEnumeration(_) => Class::Other,
            _ => Class::Data,
        };
        Failure { class, error }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn config_failure(error: Error) -> Failure {
    let class = match innermost(&error) {
        Error::Io { .. } => Class::Io,
        _ => Class::Config,
    };
    Failure { class, error }
}

fn load_config(common: &Common) -> CliResult<RunConfig> {
    let mut config = match &common.config {
        Some(path) => {
            let text = read_text(path).map_err(config_failure)?;
            parse_config(&text).map_err(|e| {
                config_failure(Error::InFile {
                    path: path.display().to_string(),
                    source: Box::new(e),
                })
            })?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.sampler.seed = seed;
    }
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(config_failure(Error::InvalidSamplerConfig(
                "--threads must be positive".into(),
            )));
        }
        // Only fails when a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    Ok(config)
}

/// Files are staged in memory and only written once everything succeeded.
struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    fn new(dir: &Path) -> Self {
        Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    fn add(&mut self, name: &str, contents: impl Into<Vec<u8>>) {
        self.files.push((name.to_string(), contents.into()));
    }

    fn commit(self) -> CliResult<()> {
        std::fs::create_dir_all(&self.dir).map_err(|e| Error::Io {
            path: self.dir.display().to_string(),
            source: e,
        })?;
        for (name, bytes) in &self.files {
            write_atomic(&self.dir.join(name), bytes)?;
        }
        Ok(())
    }
}

const DEFAULT_SIM_NODES: usize = 20;
const LOBES: [&str; 4] = ["frontal", "parietal", "temporal", "occipital"];

/// Left half then right half, each split into four lobes.
fn synthetic_metadata(nodes: usize) -> netmix::Result<NodeMetadata> {
    let half = nodes.div_ceil(2);
    NodeMetadata::new(
        (0..nodes)
            .map(|i| {
                let (hemisphere, j, side) = if i < half {
                    (Hemisphere::Left, i, half)
                } else {
                    (Hemisphere::Right, i - half, nodes - half)
                };
                NodeInfo {
                    name: format!("node{}", i + 1),
                    hemisphere,
                    lobe: LOBES[j * LOBES.len() / side].to_string(),
                }
            })
            .collect(),
    )
}

#[derive(Serialize)]
struct Truth<'a> {
    seed: u64,
    params: &'a MixtureParameters,
    theta: &'a [Vec<f64>],
    /// Generating component of each subject, in manifest order.
    subject_components: &'a [usize],
}

fn simulate(common: &Common, format: NetFormat) -> CliResult<()> {
    let config = load_config(common)?;
    let nodes = config.nodes.unwrap_or(DEFAULT_SIM_NODES);
    let map = EdgeIndexMap::new(nodes)?;
    let seed = config.sampler.seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truth = sample_prior(&config.hyper, &map, &mut rng)?;
    let cohort = sample_cohort_with_components(
        &truth.params,
        &map,
        config.n_control,
        config.n_case,
        &mut rng,
    )?;
    let metadata = synthetic_metadata(nodes)?;
    let format = match format {
        NetFormat::Csv => NetworkFormat::AdjacencyCsv,
        NetFormat::EdgeList => NetworkFormat::EdgeList,
    };
    let truth_json = report::to_json(&Truth {
        seed,
        params: &truth.params,
        theta: &truth.theta,
        subject_components: &cohort.components,
    })?;
    let dir = &common.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    let manifest = write_dataset(dir, &cohort.observations, format, Some(&metadata))?;
    let mut out = Outputs::new(dir);
    out.add("truth.json", truth_json);
    out.add("config.txt", render_config(&config));
    out.commit()?;
    println!(
        "simulated {} subjects with {} nodes ({:?}); manifest {}",
        cohort.observations.len(),
        nodes,
        truth.params.hypothesis,
        manifest.display()
    );
    Ok(())
}

fn load(manifest: &Path) -> CliResult<Dataset> {
    Ok(load_dataset(manifest)?)
}

fn fit(common: &Common, manifest: &Path, format: DrawFormat) -> CliResult<()> {
    let config = load_config(common)?;
    let data = load(manifest)?;
    let draws = run_chain(&data.observations, &config.hyper, &config.sampler)?;
    std::fs::create_dir_all(&common.out_dir).map_err(|e| Error::Io {
        path: common.out_dir.display().to_string(),
        source: e,
    })?;
    write_archive(&common.out_dir.join("draws.nmx"), &draws)?;
    let mut out = Outputs::new(&common.out_dir);
    out.add("trace.csv", export_trace_csv(&draws));
    if let DrawFormat::Csv = format {
        out.add("draws.csv", export_draws_csv(&draws));
    }
    out.commit()?;
    println!(
        "kept {} draws from {} iterations for {} subjects",
        draws.draws.len(),
        config.sampler.n_iter,
        draws.meta.n_subjects
    );
    Ok(())
}

fn checked_archive(archive: &Path, data: &[NetworkObservation]) -> CliResult<PosteriorDraws> {
    let draws = read_archive(archive)?;
    let checksum = data_checksum(data);
    if checksum != draws.meta.data_checksum {
        return Err(Error::ChecksumMismatch {
            archive: draws.meta.data_checksum,
            data: checksum,
        }
        .into());
    }
    Ok(draws)
}

fn test(
    common: &Common,
    manifest: &Path,
    archive: &Path,
    epsilon: Option<f64>,
    cutoff: Option<f64>,
) -> CliResult<()> {
    let config = load_config(common)?;
    let epsilon = epsilon.unwrap_or(config.epsilon);
    let cutoff = cutoff.unwrap_or(config.cutoff);
    let data = load(manifest)?;
    let draws = checked_archive(archive, &data.observations)?;
    let map = draws.map()?;
    let test_report = TestReport::from_draws(&draws, epsilon, cutoff).map_err(config_or_data)?;
    let fisher = fisher_baseline(&data.observations, config.fdr_level)?;

    let mut out = Outputs::new(&common.out_dir);
    out.add("test_report.json", report::to_json(&test_report)?);
    out.add("edges.csv", report::edges_csv(&test_report, &map)?);
    out.add(
        "edge_diff_matrix.csv",
        report::edge_matrix_csv(&test_report.edge_diff, &map)?,
    );
    out.add(
        "test_degree.csv",
        report::degree_csv(&test_report, &map, data.metadata.as_ref())?,
    );
    if let Some(meta) = &data.metadata {
        let groups = report::degree_groups(&test_report, &map, meta)?;
        out.add("degree_groups.csv", report::degree_groups_csv(&groups)?);
    }
    out.add("fisher.csv", report::fisher_csv(&fisher, &map)?);
    out.add("fisher.json", report::to_json(&fisher)?);
    out.commit()?;
    println!("Pr(H1 | data) = {:.6}", test_report.pr_h1);
    println!(
        "significant edges: {} of {} (epsilon {epsilon}, cutoff {cutoff})",
        test_report.significant_count(),
        map.edges()
    );
    Ok(())
}

/// Bad epsilon or cutoff values come from the command line or config.
fn config_or_data(e: Error) -> Failure {
    match e {
        e @ Error::InvalidTestSetting(_) => config_failure(e),
        e => e.into(),
    }
}

fn predict(
    common: &Common,
    manifest: &Path,
    archive: &Path,
    train_manifest: Option<&Path>,
) -> CliResult<()> {
    load_config(common)?;
    let scored = load(manifest)?;
    let (all, holdout) = match train_manifest {
        None => (scored.observations, Holdout::InSample),
        Some(path) => {
            let train = load(path)?;
            let n_train = train.observations.len();
            let n_test = scored.observations.len();
            let mut all = train.observations;
            all.extend(scored.observations);
            let holdout = Holdout::Split {
                train: (0..n_train).collect(),
                test: (n_train..n_train + n_test).collect(),
            };
            (all, holdout)
        }
    };
    let draws = read_archive(archive)?;
    let result = evaluate_classifier(&all, &draws, &holdout)?;
    let mut out = Outputs::new(&common.out_dir);
    out.add("predictions.csv", report::predictions_csv(&result)?);
    out.add("classification.json", report::to_json(&result)?);
    out.commit()?;
    println!(
        "AUC {:.4}, accuracy {:.4} over {} subjects",
        result.auc,
        result.accuracy,
        result.subject_ids.len()
    );
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<Option<T>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = read_text(path)?;
    netmix::io::report::from_json(&text)
        .map(Some)
        .map_err(|e| {
            Error::InFile {
                path: path.display().to_string(),
                source: Box::new(e),
            }
            .into()
        })
}

fn report_cmd(input: &Path, out_dir: &Path, top: usize) -> CliResult<()> {
    let path = input.join("test_report.json");
    let test_report: TestReport = read_json(&path)?.ok_or_else(|| Error::Io {
        path: path.display().to_string(),
        source: std::io::Error::from(std::io::ErrorKind::NotFound),
    })?;
    let fisher: Option<FisherBaseline> = read_json(&input.join("fisher.json"))?;
    let classification: Option<ClassificationResult> =
        read_json(&input.join("classification.json"))?;
    let map = EdgeIndexMap::new(test_report.nodes)?;
    let summary = report::summary_markdown(
        &test_report,
        &map,
        fisher.as_ref(),
        classification.as_ref(),
        top,
    )?;
    let mut out = Outputs::new(out_dir);
    out.add("summary.md", summary.clone());
    out.commit()?;
    print!("{summary}");
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate { common, format } => simulate(&common, format),
        Command::Fit {
            common,
            manifest,
            format,
        } => fit(&common, &manifest, format),
        Command::Test {
            common,
            manifest,
            archive,
            epsilon,
            cutoff,
        } => test(&common, &manifest, &archive, epsilon, cutoff),
        Command::Predict {
            common,
            manifest,
            archive,
            train_manifest,
        } => predict(&common, &manifest, &archive, train_manifest.as_deref()),
        Command::Report {
            input,
            out_dir,
            top,
        } => report_cmd(&input, &out_dir, top),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { class, error }) => {
            eprintln!("netmix: error: {error}");
            ExitCode::from(class as u8)
        }
    }
}
