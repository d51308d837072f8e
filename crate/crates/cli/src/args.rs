//! Command-line surface. Every artifact-producing subcommand takes
//! --seed and records it (with the generator name and tool version) in
//! its output files.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "matbreak",
    version,
    about = "Matrix cryptosystem playground: honest runs, passive key-recovery attacks, benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate key-exchange parameters (two invertible non-commuting matrices)
    KexKeygen(KexKeygenArgs),
    /// Run one honest exchange (or a campaign), attack it, and verify
    KexRun(KexRunArgs),
    /// Attack a transcript file and emit a report
    KexAttack(KexAttackArgs),
    /// Generate a public/private key pair for the conjugation scheme
    PkeKeygen(PkeKeygenArgs),
    /// Encrypt a message matrix under a public key file
    PkeEncrypt(PkeEncryptArgs),
    /// Decrypt a ciphertext file with a private key file
    PkeDecrypt(PkeDecryptArgs),
    /// Recover key and message from public data plus the factors of n
    PkeAttack(PkeAttackArgs),
    /// Time the attack across dimensions and fit a log-log slope
    Bench(BenchArgs),
    /// Re-run the built-in known-answer examples and print pass/fail lines
    VerifyPaper(VerifyPaperArgs),
}

#[derive(Args, Debug)]
pub struct KexKeygenArgs {
    /// Prime modulus of the field
    #[arg(long)]
    pub modulus: u64,
    /// Matrix dimension (>= 2)
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Parameter file to write
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct KexRunArgs {
    /// Prime modulus (single run); campaigns draw fresh primes of this bit width
    #[arg(long, default_value_t = 65521)]
    pub modulus: u64,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Attack retry budget for degenerate solution spaces
    #[arg(long, default_value_t = 64)]
    pub retries: u32,
    /// Number of independent instances; > 1 switches to campaign mode
    #[arg(long, default_value_t = 1)]
    pub trials: u32,
    /// Inclusive upper bound for sampled secret exponents
    #[arg(long, default_value_t = 1 << 20)]
    pub exp_max: u64,
    /// Use parameters from a file instead of generating them
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Run the built-in known-answer example instead of a random instance
    #[arg(long)]
    pub paper_example: bool,
    /// Transcript file to write
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report file to write (defaults to <out>.report)
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct KexAttackArgs {
    /// Transcript file to attack
    pub transcript: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub retries: u32,
    /// Ground-truth key file ([K] section) to verify against
    #[arg(long)]
    pub truth_key: Option<PathBuf>,
    /// Report file to write
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PkeKeygenArgs {
    /// First prime factor of the modulus
    #[arg(long)]
    pub p: u64,
    /// Second prime factor of the modulus
    #[arg(long)]
    pub q: u64,
    /// Matrix dimension (>= 2)
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample G and D from degree-1 polynomials instead of degree k-1
    #[arg(long)]
    pub linear_polys: bool,
    /// Public key file to write
    #[arg(long)]
    pub out: PathBuf,
    /// Private key file to write
    #[arg(long)]
    pub out_private: PathBuf,
}

#[derive(Args, Debug)]
pub struct PkeEncryptArgs {
    /// Public key file
    pub public: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Message file ([M] section); a random message is drawn when absent
    #[arg(long)]
    pub message: Option<PathBuf>,
    /// Sample D from a degree-1 polynomial instead of degree k-1
    #[arg(long)]
    pub linear_polys: bool,
    /// Ciphertext file to write
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the plaintext that was encrypted
    #[arg(long)]
    pub out_message: Option<PathBuf>,
    /// Also write the session key (ground-truth interface for the harness)
    #[arg(long)]
    pub out_key: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PkeDecryptArgs {
    /// Ciphertext file
    pub ciphertext: PathBuf,
    /// Private key file
    #[arg(long)]
    pub private: PathBuf,
    /// Message file to write
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PkeAttackArgs {
    /// Ciphertext file
    pub ciphertext: PathBuf,
    /// Public key file
    #[arg(long)]
    pub public: PathBuf,
    /// First prime factor of the public modulus
    #[arg(long)]
    pub p: u64,
    /// Second prime factor of the public modulus
    #[arg(long)]
    pub q: u64,
    /// Ground-truth key file ([K] section) to verify against
    #[arg(long)]
    pub truth_key: Option<PathBuf>,
    /// Report file to write
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Dimensions to bench
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4, 8, 12, 16])]
    pub dims: Vec<usize>,
    /// Trials per dimension (medians are reported)
    #[arg(long, default_value_t = 5)]
    pub trials: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Prime modulus for every instance
    #[arg(long, default_value_t = 2_147_483_647)]
    pub modulus: u64,
    #[arg(long, default_value_t = 64)]
    pub retries: u32,
    /// CSV file to write (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyPaperArgs {
    /// Directory to write the example artifacts into
    #[arg(long)]
    pub out: Option<PathBuf>,
}
