use clap::{Args, Parser, Subcommand, ValueEnum};
use ontic_core::QuadratureOrder;

#[derive(Debug, Parser)]
#[command(name = "ontic", version, about = "Audits ontological models of a qubit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare model predictions with the Born rule over a test battery.
    Adequacy(AdequacyArgs),
    /// Decide the indicator moment system for a ray list.
    TripleTest(TripleArgs),
    /// Run the staged audit of the injectivity argument.
    Pipeline(PipelineArgs),
    /// Search generator mixtures for two preparations with one density matrix.
    Witness(WitnessArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Built-in model (ks, spekkens, psi-ontic-4) or a definition file.
    #[arg(long)]
    pub model: String,

    /// Sphere mesh as <theta>x<phi>; overrides a definition file's order.
    #[arg(long, env = "ONTIC_QUADRATURE")]
    pub quadrature: Option<QuadratureOrder>,

    /// Comparison tolerance; defaults to 0 for exact models and 1e-6 otherwise.
    #[arg(long)]
    pub tol: Option<String>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct AdequacyArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Random projective tests added to the three Pauli tests.
    #[arg(long, default_value_t = 20)]
    pub tests: usize,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TripleArgs {
    /// default, orthogonal-pair, right-angle, or a ray file.
    #[arg(long, default_value = "default")]
    pub rays: String,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Built-in model or definition file; omit with --abstract.
    #[arg(long, required_unless_present = "abstract_run", conflicts_with = "abstract_run")]
    pub model: Option<String>,

    /// Run the argument on pure qubit rays with no model.
    #[arg(long = "abstract")]
    pub abstract_run: bool,

    #[arg(long, env = "ONTIC_QUADRATURE")]
    pub quadrature: Option<QuadratureOrder>,

    #[arg(long)]
    pub tol: Option<String>,

    /// Mixing-weight grid step.
    #[arg(long, default_value = "1/4")]
    pub step: String,

    /// Random node subsets per basis in the support stage.
    #[arg(long, default_value_t = 5)]
    pub sets: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Mixing-weight grid step.
    #[arg(long, default_value = "1/16")]
    pub step: String,

    /// Minimum total variation distance between the two preparations.
    #[arg(long, default_value = "1/10")]
    pub threshold: String,

    /// Random projective tests on which the pair's predictions are compared.
    #[arg(long, default_value_t = 100)]
    pub tests: usize,

    #[command(flatten)]
    pub output: Output,
}
