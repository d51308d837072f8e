//! Randomized campaigns over many independent protocol instances. Each
//! trial owns the rng stream derived from (seed, trial index), so a
//! campaign is reproducible from its seed alone and insensitive to trial
//! ordering.

use matbreak_core::{
    kex, kex_attack, modular::random_prime, pke, pke_attack, AttackError, FileMeta, ModMatrix,
    Modulus, SeededRng,
};

#[derive(Debug, Clone)]
pub struct KexCampaignConfig {
    pub seed: u64,
    pub trials: u32,
    pub min_dim: usize,
    pub max_dim: usize,
    pub modulus_bits: u32,
    pub exponent_max: u64,
    pub retry_budget: u32,
}

impl Default for KexCampaignConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            min_dim: 2,
            max_dim: 6,
            modulus_bits: 16,
            exponent_max: kex::DEFAULT_EXPONENT_MAX,
            retry_budget: kex_attack::DEFAULT_RETRY_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct KexCampaignSummary {
    pub trials: u32,
    pub successes: u32,
    pub first_attempt_successes: u32,
    pub max_attempts: u32,
    pub failures: Vec<(u32, AttackError)>,
}

impl KexCampaignSummary {
    pub fn all_verified(&self) -> bool {
        self.successes == self.trials
    }

    pub fn first_attempt_rate(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.first_attempt_successes as f64 / self.trials as f64
    }
}

/// Runs `trials` honest exchanges and attacks each transcript, verifying
/// against the honest parties' key.
pub fn run_kex_campaign(cfg: &KexCampaignConfig) -> KexCampaignSummary {
    let mut summary = KexCampaignSummary {
        trials: cfg.trials,
        ..Default::default()
    };
    for trial in 0..cfg.trials {
        let mut rng = SeededRng::stream(cfg.seed, trial as u64);
        let prime = random_prime(cfg.modulus_bits, &mut rng);
        let dim = cfg.min_dim + rng.below((cfg.max_dim - cfg.min_dim + 1) as u64) as usize;
        let modulus = Modulus::new(prime).expect("prime fits");
        let params = kex::keygen(modulus, dim, &mut rng).expect("valid campaign parameters");
        let alice = kex::sample_secret(&mut rng, cfg.exponent_max);
        let bob = kex::sample_secret(&mut rng, cfg.exponent_max);
        let (transcript, key) = kex::run_exchange(&params, &alice, &bob, FileMeta::new());
        match kex_attack::recover_key(&transcript, &mut rng, cfg.retry_budget, Some(&key)) {
            Ok(report) if report.verified == Some(true) => {
                summary.successes += 1;
                if report.attempts == 1 {
                    summary.first_attempt_successes += 1;
                }
                summary.max_attempts = summary.max_attempts.max(report.attempts);
            }
            Ok(_) => summary.failures.push((trial, AttackError::Inconsistent)),
            Err(e) => summary.failures.push((trial, e)),
        }
    }
    summary
}

#[derive(Debug, Clone)]
pub struct PkeCampaignConfig {
    pub seed: u64,
    pub trials: u32,
    pub min_k: usize,
    pub max_k: usize,
    pub prime_bits: u32,
}

impl Default for PkeCampaignConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 50,
            min_k: 2,
            max_k: 5,
            prime_bits: 16,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PkeCampaignSummary {
    pub trials: u32,
    pub successes: u32,
    pub failures: Vec<(u32, String)>,
}

impl PkeCampaignSummary {
    pub fn all_verified(&self) -> bool {
        self.successes == self.trials
    }
}

/// Runs `trials` keygen/encrypt/attack pipelines, requiring the recovered
/// key to equal the encryptor's and the recovered message to equal the
/// plaintext, deterministically (one attempt each).
pub fn run_pke_campaign(cfg: &PkeCampaignConfig) -> PkeCampaignSummary {
    let mut summary = PkeCampaignSummary {
        trials: cfg.trials,
        ..Default::default()
    };
    for trial in 0..cfg.trials {
        let mut rng = SeededRng::stream(cfg.seed ^ PKE_CAMPAIGN_SALT, trial as u64);
        let p = random_prime(cfg.prime_bits, &mut rng);
        let q = loop {
            let q = random_prime(cfg.prime_bits, &mut rng);
            if q != p {
                break q;
            }
        };
        let k = cfg.min_k + rng.below((cfg.max_k - cfg.min_k + 1) as u64) as usize;
        let (pk, sk) = pke::keygen(p, q, k, &mut rng).expect("valid campaign parameters");
        let message = ModMatrix::random(k, pk.modulus(), &mut rng);
        let (ct, key) = pke::encrypt(&pk, &message, &mut rng);
        match pke_attack::recover_key_and_message(&pk, &ct, sk.p(), sk.q(), Some(&key)) {
            Ok((recovered_key, recovered_msg, report)) => {
                if recovered_key == key
                    && recovered_msg == message
                    && report.attempts == 1
                    && report.verified == Some(true)
                {
                    summary.successes += 1;
                } else {
                    summary
                        .failures
                        .push((trial, "mismatch against ground truth".into()));
                }
            }
            Err(e) => summary.failures.push((trial, e.to_string())),
        }
    }
    summary
}

// domain separator so kex and pke campaigns with the same seed do not
// share streams
const PKE_CAMPAIGN_SALT: u64 = 0x706B_6531;
