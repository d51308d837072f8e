//! Subcommand implementations. Exit-code contract: 0 success/verified,
//! 1 attack failure, 2 input error (clap usage errors also exit 2).

use std::fs;
use std::path::{Path, PathBuf};

use matbreak_core::{
    kex, kex_attack, pke, pke_attack, FileMeta, ModMatrix, Modulus, ReportFile, SeededRng,
    GENERATOR_NAME,
};

use crate::args::*;
use crate::bench::{run_bench, to_csv, BenchConfig};
use crate::campaign::{run_kex_campaign, KexCampaignConfig};
use crate::files;
use crate::verify;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Command failure with its exit code.
#[derive(Debug)]
pub enum CmdError {
    /// Bad input: unreadable/unparseable files, invalid parameters. Exit 2.
    Input(String),
    /// The attack (or its verification) failed. Exit 1.
    Attack(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Input(_) => 2,
            CmdError::Attack(_) => 1,
        }
    }
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Input(msg) => write!(f, "input error: {msg}"),
            CmdError::Attack(msg) => write!(f, "attack failure: {msg}"),
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CmdError {
    CmdError::Input(e.to_string())
}

fn read_file(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path).map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CmdError> {
    fs::write(path, contents).map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))
}

fn meta_for(seed: u64) -> FileMeta {
    FileMeta::standard(VERSION, Some(GENERATOR_NAME), Some(seed))
}

fn modulus(value: u64) -> Result<Modulus, CmdError> {
    Modulus::new(value).map_err(input_err)
}

pub fn cmd_kex_keygen(args: &KexKeygenArgs) -> Result<(), CmdError> {
    let modulus = modulus(args.modulus)?;
    let mut rng = SeededRng::stream(args.seed, 0);
    let params = kex::keygen(modulus, args.dim, &mut rng).map_err(input_err)?;
    let text = files::params_file_text(&meta_for(args.seed), &params);
    write_file(&args.out, &text)?;
    println!(
        "wrote params: dim={} mod={} -> {}",
        args.dim,
        args.modulus,
        args.out.display()
    );
    Ok(())
}

pub fn cmd_kex_run(args: &KexRunArgs) -> Result<(), CmdError> {
    if args.trials > 1 {
        return kex_campaign(args);
    }
    let meta = meta_for(args.seed);
    let mut rng = SeededRng::stream(args.seed, 0);

    let (params, alice, bob) = if args.paper_example {
        (
            verify::kex_reference_params(),
            verify::KEX_REFERENCE_ALICE,
            verify::KEX_REFERENCE_BOB,
        )
    } else {
        let params = match &args.params {
            Some(path) => {
                let (params, _) =
                    files::parse_params_file(&read_file(path)?).map_err(input_err)?;
                params
            }
            None => {
                let modulus = modulus(args.modulus)?;
                kex::keygen(modulus, args.dim, &mut rng).map_err(input_err)?
            }
        };
        let alice = kex::sample_secret(&mut rng, args.exp_max);
        let bob = kex::sample_secret(&mut rng, args.exp_max);
        (params, alice, bob)
    };

    let (transcript, key) = kex::run_exchange(&params, &alice, &bob, meta.clone());
    if let Some(out) = &args.out {
        write_file(out, &transcript.to_text())?;
        println!("wrote transcript -> {}", out.display());
    }

    let report = kex_attack::recover_key(&transcript, &mut rng, args.retries, Some(&key))
        .map_err(|e| CmdError::Attack(e.to_string()))?;
    print!(
        "recovered_k\n{}",
        matbreak_core::textio::format_matrix(&report.recovered_key)
    );
    println!("attempts={}", report.attempts);
    println!("elapsed_ms={:.3}", report.elapsed.as_secs_f64() * 1e3);
    println!("verified={}", report.verified == Some(true));

    let report_path = args
        .report
        .clone()
        .or_else(|| args.out.as_ref().map(|o| derive_report_path(o)));
    if let Some(path) = report_path {
        let file = ReportFile::new(meta, &report, None);
        write_file(&path, &file.to_text())?;
        println!("wrote report -> {}", path.display());
    }

    if report.verified == Some(true) {
        Ok(())
    } else {
        Err(CmdError::Attack("recovered key does not match".into()))
    }
}

fn derive_report_path(out: &Path) -> PathBuf {
    let mut os = out.as_os_str().to_owned();
    os.push(".report");
    PathBuf::from(os)
}

fn kex_campaign(args: &KexRunArgs) -> Result<(), CmdError> {
    let modulus = modulus(args.modulus)?;
    let cfg = KexCampaignConfig {
        seed: args.seed,
        trials: args.trials,
        min_dim: args.dim,
        max_dim: args.dim,
        modulus_bits: modulus.bits(),
        exponent_max: args.exp_max,
        retry_budget: args.retries,
    };
    let summary = run_kex_campaign(&cfg);
    println!(
        "campaign: trials={} verified={} first_attempt_rate={:.3} max_attempts={}",
        summary.trials,
        summary.successes,
        summary.first_attempt_rate(),
        summary.max_attempts
    );
    for (trial, err) in &summary.failures {
        println!("  trial {trial} failed: {err}");
    }
    if summary.all_verified() {
        Ok(())
    } else {
        Err(CmdError::Attack(format!(
            "{} of {} trials failed",
            summary.trials - summary.successes,
            summary.trials
        )))
    }
}

pub fn cmd_kex_attack(args: &KexAttackArgs) -> Result<(), CmdError> {
    let transcript =
        kex::KexTranscript::from_text(&read_file(&args.transcript)?).map_err(input_err)?;
    let truth = match &args.truth_key {
        Some(path) => Some(
            files::parse_matrix_file(&read_file(path)?, "K")
                .map_err(input_err)?
                .0,
        ),
        None => None,
    };
    let mut rng = SeededRng::stream(args.seed, 0);
    let report = kex_attack::recover_key(&transcript, &mut rng, args.retries, truth.as_ref())
        .map_err(|e| CmdError::Attack(e.to_string()))?;
    print!(
        "recovered_k\n{}",
        matbreak_core::textio::format_matrix(&report.recovered_key)
    );
    println!("attempts={}", report.attempts);
    println!("elapsed_ms={:.3}", report.elapsed.as_secs_f64() * 1e3);
    if let Some(v) = report.verified {
        println!("verified={v}");
    }
    if let Some(out) = &args.out {
        let file = ReportFile::new(meta_for(args.seed), &report, None);
        write_file(out, &file.to_text())?;
    }
    if report.verified == Some(false) {
        return Err(CmdError::Attack("recovered key does not match truth".into()));
    }
    Ok(())
}

pub fn cmd_pke_keygen(args: &PkeKeygenArgs) -> Result<(), CmdError> {
    let mut rng = SeededRng::stream(args.seed, 0);
    let degree = if args.linear_polys {
        1
    } else {
        args.k.saturating_sub(1)
    };
    let (pk, sk) =
        pke::keygen_with_degree(args.p, args.q, args.k, degree, &mut rng).map_err(input_err)?;
    let meta = meta_for(args.seed);
    write_file(&args.out, &pk.to_text(&meta))?;
    write_file(&args.out_private, &sk.to_text(&meta))?;
    println!(
        "wrote keys: n={} k={} -> {} / {}",
        pk.modulus().value(),
        args.k,
        args.out.display(),
        args.out_private.display()
    );
    Ok(())
}

pub fn cmd_pke_encrypt(args: &PkeEncryptArgs) -> Result<(), CmdError> {
    let (pk, _) = pke::PatentPublicKey::from_text(&read_file(&args.public)?).map_err(input_err)?;
    let mut rng = SeededRng::stream(args.seed, 0);
    let message = match &args.message {
        Some(path) => {
            files::parse_matrix_file(&read_file(path)?, "M")
                .map_err(input_err)?
                .0
        }
        None => ModMatrix::random(pk.k(), pk.modulus(), &mut rng),
    };
    if message.dim() != pk.k() || message.modulus().value() != pk.modulus().value() {
        return Err(CmdError::Input("message not conformant with key".into()));
    }
    let degree = if args.linear_polys {
        1
    } else {
        pk.k().saturating_sub(1)
    };
    let (ct, key) = pke::encrypt_with_degree(&pk, &message, degree, &mut rng);
    let meta = meta_for(args.seed);
    write_file(&args.out, &ct.to_text(&meta))?;
    println!("wrote ciphertext -> {}", args.out.display());
    if let Some(path) = &args.out_message {
        write_file(path, &files::matrix_file_text(&meta, "M", &message))?;
    }
    if let Some(path) = &args.out_key {
        write_file(path, &files::matrix_file_text(&meta, "K", &key))?;
    }
    Ok(())
}

pub fn cmd_pke_decrypt(args: &PkeDecryptArgs) -> Result<(), CmdError> {
    let (ct, _) =
        pke::PatentCiphertext::from_text(&read_file(&args.ciphertext)?).map_err(input_err)?;
    let (sk, _) =
        pke::PatentPrivateKey::from_text(&read_file(&args.private)?).map_err(input_err)?;
    let message = pke::decrypt(&sk, &ct).map_err(input_err)?;
    print!("{}", matbreak_core::textio::format_matrix(&message));
    if let Some(out) = &args.out {
        write_file(out, &files::matrix_file_text(&FileMeta::standard(VERSION, None, None), "M", &message))?;
    }
    Ok(())
}

pub fn cmd_pke_attack(args: &PkeAttackArgs) -> Result<(), CmdError> {
    let (pk, _) = pke::PatentPublicKey::from_text(&read_file(&args.public)?).map_err(input_err)?;
    let (ct, _) =
        pke::PatentCiphertext::from_text(&read_file(&args.ciphertext)?).map_err(input_err)?;
    let truth = match &args.truth_key {
        Some(path) => Some(
            files::parse_matrix_file(&read_file(path)?, "K")
                .map_err(input_err)?
                .0,
        ),
        None => None,
    };
    let p = modulus(args.p)?;
    let q = modulus(args.q)?;
    let (key, message, report) =
        pke_attack::recover_key_and_message(&pk, &ct, p, q, truth.as_ref())
            .map_err(|e| CmdError::Attack(e.to_string()))?;
    print!(
        "recovered_k\n{}",
        matbreak_core::textio::format_matrix(&key)
    );
    print!(
        "recovered_m\n{}",
        matbreak_core::textio::format_matrix(&message)
    );
    println!("attempts={}", report.attempts);
    println!("elapsed_ms={:.3}", report.elapsed.as_secs_f64() * 1e3);
    if let Some(v) = report.verified {
        println!("verified={v}");
    }
    if let Some(out) = &args.out {
        // the recovery path is deterministic, so no seed or generator here
        let file = ReportFile::new(
            FileMeta::standard(VERSION, None, None),
            &report,
            Some(message),
        );
        write_file(out, &file.to_text())?;
    }
    if report.verified == Some(false) {
        return Err(CmdError::Attack("recovered key does not match truth".into()));
    }
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), CmdError> {
    let cfg = BenchConfig {
        seed: args.seed,
        dims: args.dims.clone(),
        trials: args.trials,
        modulus: args.modulus,
        retry_budget: args.retries,
        ..Default::default()
    };
    let outcome = run_bench(&cfg).map_err(CmdError::Input)?;
    let csv = to_csv(&cfg, &outcome.records);
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            println!("wrote csv -> {}", path.display());
        }
        None => print!("{csv}"),
    }
    for (dim, ms) in &outcome.medians {
        println!("median n={dim}: {ms:.3} ms");
    }
    match outcome.slope {
        Some(slope) => println!("log-log slope={slope:.3}"),
        None => println!("log-log slope=n/a (single dimension)"),
    }
    Ok(())
}

pub fn cmd_verify_paper(args: &VerifyPaperArgs) -> Result<(), CmdError> {
    let kex_outcome = verify::verify_kex_example(VERSION);
    let pke_outcome = verify::verify_pke_example(VERSION);
    let mut all_pass = true;
    for outcome in [&kex_outcome, &pke_outcome] {
        for check in &outcome.checks {
            if check.pass {
                println!("[PASS] {}", check.name);
            } else {
                all_pass = false;
                println!("[FAIL] {} — {}", check.name, check.detail);
            }
        }
        for note in &outcome.notes {
            println!("[NOTE] {note}");
        }
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| CmdError::Input(e.to_string()))?;
        for (name, contents) in kex_outcome
            .artifacts
            .iter()
            .chain(pke_outcome.artifacts.iter())
        {
            write_file(&dir.join(name), contents)?;
        }
        println!("wrote artifacts -> {}", dir.display());
    }
    if all_pass {
        Ok(())
    } else {
        Err(CmdError::Attack("known-answer checks failed".into()))
    }
}

pub fn run(command: &Command) -> Result<(), CmdError> {
    match command {
        Command::KexKeygen(args) => cmd_kex_keygen(args),
        Command::KexRun(args) => cmd_kex_run(args),
        Command::KexAttack(args) => cmd_kex_attack(args),
        Command::PkeKeygen(args) => cmd_pke_keygen(args),
        Command::PkeEncrypt(args) => cmd_pke_encrypt(args),
        Command::PkeDecrypt(args) => cmd_pke_decrypt(args),
        Command::PkeAttack(args) => cmd_pke_attack(args),
        Command::Bench(args) => cmd_bench(args),
        Command::VerifyPaper(args) => cmd_verify_paper(args),
    }
}
