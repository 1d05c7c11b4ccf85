//! Command-line front end: dataset generation, training, evaluation,
//! prediction, GA cost search, and the benchmark harness.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use imboost::benchmark::{self, DataSource, ExperimentConfig, VariantSpec};
use imboost::boosting::{self, BoostConfig, CostVector, Ensemble, Variant};
use imboost::costsearch::{self, GAConfig};
use imboost::data;
use imboost::datagen::{self, GenConfig};
use imboost::metrics;
use imboost::{Error, Result};

#[derive(Parser)]
#[command(name = "imboost", version, about = "Cost-sensitive multi-class boosting for imbalanced data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic imbalanced classification dataset as CSV
    Generate(GenerateArgs),
    /// Train a boosting ensemble on a labeled CSV
    Train(TrainArgs),
    /// Evaluate a saved model on a labeled CSV
    Evaluate(EvaluateArgs),
    /// Predict classes and probabilities for a feature CSV
    Predict(PredictArgs),
    /// Search per-class costs with a genetic algorithm
    GaSearch(GaSearchArgs),
    /// Train and compare several variants, writing report files
    Benchmark(BenchmarkArgs),
}

/// key=value file contents; flags take precedence over these.
struct FileConfig(HashMap<String, String>);

impl FileConfig {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)?;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "{}:{}: expected key=value, got {line:?}",
                        path.display(),
                        i + 1
                    ))
                })?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(FileConfig(map))
    }

    fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.0.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad value for {key}: {raw:?}"))),
            None => Ok(default),
        }
    }

    fn get_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidConfig(format!("bad value for {key}: {raw:?}"))),
            None => Ok(None),
        }
    }
}

/// Comma-separated f64 list usable as a clap value and a config value.
#[derive(Clone, Debug)]
struct FloatList(Vec<f64>);

impl FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| e.to_string()))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(FloatList)
    }
}

#[derive(Clone, Debug)]
struct VariantList(Vec<Variant>);

impl FromStr for VariantList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<Vec<_>>>()
            .map(VariantList)
    }
}

/// Master seed: the RNG_SEED environment variable overrides the flag and
/// any config-file value.
fn master_seed(cfg: &FileConfig, flag: Option<u64>) -> Result<u64> {
    if let Ok(raw) = std::env::var("RNG_SEED") {
        return raw
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad RNG_SEED value: {raw:?}")));
    }
    cfg.get(flag, "seed", 0)
}

#[derive(Args)]
struct GenerateArgs {
    /// key=value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    n_samples: Option<usize>,
    #[arg(long)]
    n_features: Option<usize>,
    #[arg(long)]
    n_informative: Option<usize>,
    #[arg(long)]
    n_classes: Option<usize>,
    #[arg(long)]
    clusters_per_class: Option<usize>,
    #[arg(long)]
    class_sep: Option<f64>,
    /// Comma-separated class proportions, summing to 1
    #[arg(long)]
    weights: Option<FloatList>,
    #[arg(long)]
    label_noise: Option<f64>,
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Labeled training CSV
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    label_column: Option<String>,
    /// Number of classes
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    variant: Option<Variant>,
    /// Boosting rounds
    #[arg(long)]
    rounds: Option<usize>,
    /// Comma-separated per-class costs in (0,1]
    #[arg(long)]
    costs: Option<FloatList>,
    #[arg(long)]
    smote_k: Option<usize>,
    #[arg(long)]
    target_ratio: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Where to save the trained model (JSON)
    #[arg(long)]
    model_out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: PathBuf,
    /// Labeled evaluation CSV
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    label_column: Option<String>,
    /// Optional per-class/macro statistics CSV
    #[arg(long)]
    stats_out: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// Feature CSV; columns are matched to the model by name
    #[arg(long)]
    input: PathBuf,
    /// Output CSV with predicted class and per-class probabilities
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct GaSearchArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    population_size: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    tournament_size: Option<usize>,
    #[arg(long)]
    mutation_sigma: Option<f64>,
    #[arg(long)]
    elitism_count: Option<usize>,
    #[arg(long)]
    fitness_rounds: Option<usize>,
    #[arg(long)]
    validation_fraction: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Best costs and per-generation history CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Labeled CSV source; omit to generate synthetic data instead
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    // generator settings, used when --data is absent
    #[arg(long)]
    n_samples: Option<usize>,
    #[arg(long)]
    n_features: Option<usize>,
    #[arg(long)]
    n_informative: Option<usize>,
    #[arg(long)]
    clusters_per_class: Option<usize>,
    #[arg(long)]
    class_sep: Option<f64>,
    #[arg(long)]
    weights: Option<FloatList>,
    #[arg(long)]
    label_noise: Option<f64>,
    /// Comma-separated variant names
    #[arg(long)]
    variants: Option<VariantList>,
    #[arg(long)]
    rounds: Option<usize>,
    /// Per-class costs for the cost-sensitive variants
    #[arg(long)]
    costs: Option<FloatList>,
    #[arg(long)]
    smote_k: Option<usize>,
    #[arg(long)]
    train_fraction: Option<f64>,
    /// Search costs by GA when none are pinned
    #[arg(long)]
    ga: bool,
    #[arg(long)]
    ga_population_size: Option<usize>,
    #[arg(long)]
    ga_generations: Option<usize>,
    #[arg(long)]
    ga_fitness_rounds: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: PathBuf,
}

fn run_generate(args: GenerateArgs) -> Result<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let defaults = GenConfig::default();
    let gen = GenConfig {
        n_samples: cfg.get(args.n_samples, "n_samples", defaults.n_samples)?,
        n_features: cfg.get(args.n_features, "n_features", defaults.n_features)?,
        n_informative: cfg.get(args.n_informative, "n_informative", defaults.n_informative)?,
        n_classes: cfg.get(args.n_classes, "n_classes", defaults.n_classes)?,
        clusters_per_class: cfg.get(
            args.clusters_per_class,
            "clusters_per_class",
            defaults.clusters_per_class,
        )?,
        class_sep: cfg.get(args.class_sep, "class_sep", defaults.class_sep)?,
        weights: cfg
            .get_opt(args.weights, "weights")?
            .map(|w| w.0)
            .unwrap_or(defaults.weights),
        label_noise: cfg.get(args.label_noise, "label_noise", defaults.label_noise)?,
        seed: master_seed(&cfg, args.seed)?,
    };
    let label_column = cfg.get(args.label_column, "label_column", "label".to_string())?;
    let ds = datagen::generate(&gen)?;
    data::write_csv(&ds, &args.out, &label_column)?;
    let dist = data::class_distribution(&ds);
    println!(
        "wrote {} rows x {} features to {} (class counts: {:?})",
        ds.n_rows(),
        ds.n_features(),
        args.out.display(),
        dist.counts
    );
    Ok(())
}

fn run_train(args: TrainArgs) -> Result<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let label_column = cfg.get(args.label_column, "label_column", "label".to_string())?;
    let k = cfg
        .get_opt(args.k, "k")?
        .ok_or_else(|| Error::InvalidConfig("--k is required".into()))?;
    let variant = cfg.get(args.variant, "variant", Variant::SammeC2)?;
    let rounds = cfg.get(args.rounds, "rounds", 200)?;
    let seed = master_seed(&cfg, args.seed)?;

    let ds = data::load_csv(&args.data, &label_column, k)?;
    let mut boost_cfg = BoostConfig::new(variant, rounds, seed);
    boost_cfg.smote_k = cfg.get(args.smote_k, "smote_k", boost_cfg.smote_k)?;
    boost_cfg.undersample_ratio = cfg.get(
        args.target_ratio,
        "target_ratio",
        boost_cfg.undersample_ratio,
    )?;
    if let Some(costs) = cfg.get_opt(args.costs, "costs")? {
        boost_cfg = boost_cfg.with_costs(CostVector::new(costs.0)?);
    }
    let ensemble = boosting::fit(&ds, &boost_cfg)?;
    ensemble.save(&args.model_out)?;
    println!(
        "trained {} with {} members, saved to {}",
        variant,
        ensemble.members().len(),
        args.model_out.display()
    );
    Ok(())
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let label_column = cfg.get(args.label_column, "label_column", "label".to_string())?;
    let ensemble = Ensemble::load(&args.model)?;
    let ds = data::load_csv(&args.data, &label_column, ensemble.k())?;

    // match feature columns to the model by name
    let expected = ensemble.feature_names();
    let missing: Vec<String> = expected
        .iter()
        .filter(|n| !ds.feature_names().contains(n))
        .cloned()
        .collect();
    let extra: Vec<String> = ds
        .feature_names()
        .iter()
        .filter(|n| !expected.contains(n))
        .cloned()
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::SchemaMismatch { missing, extra });
    }
    let order: Vec<usize> = expected
        .iter()
        .map(|n| ds.feature_names().iter().position(|f| f == n).unwrap())
        .collect();
    let mut predicted = Vec::with_capacity(ds.n_rows());
    let mut x = vec![0.0; expected.len()];
    for i in 0..ds.n_rows() {
        let row = ds.row(i);
        for (dst, &src) in x.iter_mut().zip(order.iter()) {
            *dst = row[src];
        }
        predicted.push(ensemble.predict(&x)?);
    }

    let cm = metrics::confusion(ds.labels(), &predicted, ensemble.k())?;
    print!("{}", metrics::format_report(&cm, None));
    if let Some(path) = &args.stats_out {
        std::fs::write(path, metrics::stats_csv(&cm))?;
        println!("wrote statistics to {}", path.display());
    }
    Ok(())
}

fn run_ga_search(args: GaSearchArgs) -> Result<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let label_column = cfg.get(args.label_column, "label_column", "label".to_string())?;
    let k = cfg
        .get_opt(args.k, "k")?
        .ok_or_else(|| Error::InvalidConfig("--k is required".into()))?;
    let defaults = GAConfig::default();
    let ga_cfg = GAConfig {
        population_size: cfg.get(args.population_size, "population_size", defaults.population_size)?,
        generations: cfg.get(args.generations, "generations", defaults.generations)?,
        tournament_size: cfg.get(args.tournament_size, "tournament_size", defaults.tournament_size)?,
        mutation_sigma: cfg.get(args.mutation_sigma, "mutation_sigma", defaults.mutation_sigma)?,
        elitism_count: cfg.get(args.elitism_count, "elitism_count", defaults.elitism_count)?,
        fitness_rounds: cfg.get(args.fitness_rounds, "fitness_rounds", defaults.fitness_rounds)?,
        validation_fraction: cfg.get(
            args.validation_fraction,
            "validation_fraction",
            defaults.validation_fraction,
        )?,
        seed: master_seed(&cfg, args.seed)?,
    };
    let ds = data::load_csv(&args.data, &label_column, k)?;
    let result = costsearch::ga_search(&ds, &ga_cfg)?;

    let mut text = String::from("generation,best_fitness\n");
    for (g, fitness) in result.history.iter().enumerate() {
        writeln!(text, "{g},{fitness}").unwrap();
    }
    writeln!(
        text,
        "best_costs,\"{}\"",
        result
            .best_costs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
    .unwrap();
    std::fs::write(&args.out, text)?;
    println!(
        "best costs: {:?} (fitness {}), history written to {}",
        result.best_costs,
        result.best_fitness,
        args.out.display()
    );
    Ok(())
}

fn run_benchmark_cmd(args: BenchmarkArgs) -> Result<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let seed = master_seed(&cfg, args.seed)?;
    let gen_defaults = GenConfig::default();
    let source = match cfg.get_opt(args.data, "data")? {
        Some(path) => DataSource::Csv {
            path,
            label_column: cfg.get(args.label_column, "label_column", "label".to_string())?,
            k: cfg
                .get_opt(args.k, "k")?
                .ok_or_else(|| Error::InvalidConfig("--k is required with --data".into()))?,
        },
        None => DataSource::Generate(GenConfig {
            n_samples: cfg.get(args.n_samples, "n_samples", gen_defaults.n_samples)?,
            n_features: cfg.get(args.n_features, "n_features", gen_defaults.n_features)?,
            n_informative: cfg.get(args.n_informative, "n_informative", gen_defaults.n_informative)?,
            n_classes: cfg.get(args.k, "k", gen_defaults.n_classes)?,
            clusters_per_class: cfg.get(
                args.clusters_per_class,
                "clusters_per_class",
                gen_defaults.clusters_per_class,
            )?,
            class_sep: cfg.get(args.class_sep, "class_sep", gen_defaults.class_sep)?,
            weights: cfg
                .get_opt(args.weights, "weights")?
                .map(|w| w.0)
                .unwrap_or(gen_defaults.weights),
            label_noise: cfg.get(args.label_noise, "label_noise", gen_defaults.label_noise)?,
            seed: imboost::derive_seed(seed, &[0xd5]),
        }),
    };
    let variants = cfg
        .get_opt(args.variants, "variants")?
        .map(|v| v.0)
        .unwrap_or_else(|| Variant::ALL.to_vec());
    let costs = cfg.get_opt(args.costs, "costs")?.map(|c| c.0);
    let ga_defaults = GAConfig::default();
    let ga_enabled = if args.ga { Some(true) } else { None };
    let ga = if cfg.get(ga_enabled, "ga", false)? {
        Some(GAConfig {
            population_size: cfg.get(
                args.ga_population_size,
                "ga_population_size",
                ga_defaults.population_size,
            )?,
            generations: cfg.get(args.ga_generations, "ga_generations", ga_defaults.generations)?,
            fitness_rounds: cfg.get(
                args.ga_fitness_rounds,
                "ga_fitness_rounds",
                ga_defaults.fitness_rounds,
            )?,
            seed: imboost::derive_seed(seed, &[0xa6]),
            ..ga_defaults
        })
    } else {
        None
    };

    let experiment = ExperimentConfig {
        source,
        train_fraction: cfg.get(args.train_fraction, "train_fraction", 0.75)?,
        rounds: cfg.get(args.rounds, "rounds", 200)?,
        smote_k: cfg.get(args.smote_k, "smote_k", 5)?,
        seed,
        variants: variants
            .into_iter()
            .map(|variant| VariantSpec {
                variant,
                costs: match variant {
                    Variant::AdaC2 | Variant::SammeC2 => costs.clone(),
                    _ => None,
                },
            })
            .collect(),
        ga,
        out_dir: args.out_dir.clone(),
    };
    let report = benchmark::run_benchmark(&experiment)?;

    for o in &report.outcomes {
        println!(
            "{}: gmean={:.4} recalls={:?}",
            o.variant, o.gmean, o.recalls
        );
    }
    for (variant, message) in &report.failures {
        println!("{variant}: FAILED ({message})");
    }
    println!("reports written to {}", args.out_dir.display());
    if report.outcomes.is_empty() {
        return Err(Error::InvalidConfig("all variants failed".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => run_generate(args),
        Command::Train(args) => run_train(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Predict(args) => benchmark::predict_csv(&args.model, &args.input, &args.output),
        Command::GaSearch(args) => run_ga_search(args),
        Command::Benchmark(args) => run_benchmark_cmd(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
