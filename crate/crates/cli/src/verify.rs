//! Built-in known-answer checks for the two published worked examples,
//! driven by the `verify-paper` subcommand and the acceptance suite.
//!
//! The published runs carry two label slips, handled explicitly here:
//! the key-exchange example pairs its exponent sets with the wrong
//! parties (the printed transcript is only consistent with the initiator
//! holding (509,131)), and the public-key example prints its modulus as
//! 6133 although the stated factors give 541 * 113 = 61133. With those
//! two corrections every printed matrix reproduces bit-exactly. The
//! printed scalar solutions (220,159) and (55,49) of the reduced systems
//! do not satisfy them and are reported as discrepancy notes.

use std::time::{Duration, Instant};

use matbreak_core::{
    crt_recombine, kex,
    kex::{KexParams, KexSecret, KexTranscript},
    kex_attack, pke, pke_attack, FileMeta, ModMatrix, Modulus, Polynomial, SeededRng,
};

/// One named check with its outcome.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn compare<T: PartialEq + std::fmt::Debug>(name: &str, got: T, want: T) -> Self {
        let pass = got == want;
        Check {
            name: name.to_string(),
            pass,
            detail: if pass {
                String::new()
            } else {
                format!("got {got:?}, want {want:?}")
            },
        }
    }

    fn bool(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Outcome of one example run: checks, informational notes, artifacts.
#[derive(Debug, Clone, Default)]
pub struct VerifyOutcome {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    /// (file name, contents) pairs for --out.
    pub artifacts: Vec<(String, String)>,
}

impl VerifyOutcome {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn mat(dim: usize, modulus: u64, entries: &[u64]) -> ModMatrix {
    ModMatrix::new(dim, Modulus::new(modulus).unwrap(), entries.to_vec()).unwrap()
}

pub fn kex_reference_params() -> KexParams {
    KexParams::new(
        mat(2, 569, &[12, 34, 11, 99]),
        mat(2, 569, &[172, 94, 91, 125]),
    )
    .expect("reference parameters are valid")
}

/// The exponent assignment consistent with the published transcript.
pub const KEX_REFERENCE_ALICE: KexSecret = KexSecret { e1: 509, e2: 131 };
pub const KEX_REFERENCE_BOB: KexSecret = KexSecret { e1: 449, e2: 41 };

pub fn kex_reference_transcript(meta: FileMeta) -> (KexTranscript, ModMatrix) {
    kex::run_exchange(
        &kex_reference_params(),
        &KEX_REFERENCE_ALICE,
        &KEX_REFERENCE_BOB,
        meta,
    )
}

/// Runs the key-exchange worked example end to end: exchange values,
/// attack from the public transcript only, timing bound.
pub fn verify_kex_example(version: &str) -> VerifyOutcome {
    let mut out = VerifyOutcome::default();
    let started = Instant::now();
    let meta = FileMeta::standard(version, None, None);
    let (transcript, key) = kex_reference_transcript(meta);
    out.checks.push(Check::compare(
        "kex C1",
        transcript.c1.clone(),
        mat(2, 569, &[502, 108, 3, 322]),
    ));
    out.checks.push(Check::compare(
        "kex C2",
        transcript.c2.clone(),
        mat(2, 569, &[501, 343, 200, 170]),
    ));
    out.checks.push(Check::compare(
        "kex shared key",
        key.clone(),
        mat(2, 569, &[273, 85, 436, 278]),
    ));
    let finalize = kex::alice_finalize(&kex_reference_params(), &KEX_REFERENCE_ALICE, &transcript.c2);
    out.checks
        .push(Check::compare("kex both sides agree", finalize, key.clone()));

    let mut rng = SeededRng::new(0);
    match kex_attack::recover_key(&transcript, &mut rng, 64, Some(&key)) {
        Ok(report) => {
            out.checks.push(Check::compare(
                "kex attack output",
                report.recovered_key.clone(),
                key.clone(),
            ));
            out.checks.push(Check::bool(
                "kex attack verified",
                report.verified == Some(true),
                format!("attempts={}", report.attempts),
            ));
            let file =
                matbreak_core::ReportFile::new(FileMeta::standard(version, None, None), &report, None);
            out.artifacts
                .push(("kex-report.txt".into(), file.to_text()));
        }
        Err(e) => out
            .checks
            .push(Check::bool("kex attack output", false, e.to_string())),
    }
    let elapsed = started.elapsed();
    out.checks.push(Check::bool(
        "kex example runtime < 1s",
        elapsed < Duration::from_secs(1),
        format!("{:.1} ms", elapsed.as_secs_f64() * 1e3),
    ));
    out.notes.push(
        "the published run pairs (449,41) with the initiator, but the printed C1 equals \
         M1^509*M2^131; values reproduce exactly with the roles swapped"
            .into(),
    );
    out.artifacts
        .push(("kex-transcript.txt".into(), transcript.to_text()));
    out
}

/// Everything the public-key worked example pins down.
pub struct PkeReference {
    pub pk: pke::PatentPublicKey,
    pub c: ModMatrix,
    pub d: ModMatrix,
    pub e: ModMatrix,
    pub key: ModMatrix,
    pub p: Modulus,
    pub q: Modulus,
}

/// Rebuilds the published pipeline from its stated generator scalars
/// (14, 3374, 34125, 7123) over n = 541 * 113 = 61133.
pub fn pke_reference() -> PkeReference {
    let n = Modulus::new(61133).unwrap();
    let c = mat(2, 61133, &[243, 112, 234, 233]);
    let a = mat(2, 61133, &[121, 231, 144, 242]);
    let b = c.mul(&a).unwrap().mul(&c).unwrap();
    let g = Polynomial::new(n, vec![14, 3374]).eval_matrix(&c).unwrap();
    let d = Polynomial::new(n, vec![34125, 7123]).eval_matrix(&g).unwrap();
    let e = d.mul(&a).unwrap().mul(&d).unwrap();
    let key = d.mul(&b).unwrap().mul(&d).unwrap();
    PkeReference {
        pk: pke::PatentPublicKey::new(a, b, g).unwrap(),
        c,
        d,
        e,
        key,
        p: Modulus::new(541).unwrap(),
        q: Modulus::new(113).unwrap(),
    }
}

/// Runs the public-key worked example: recomputed pipeline against the
/// printed values, partial keys, CRT recombination, and the full attack
/// against the decryptor's output.
pub fn verify_pke_example(version: &str) -> VerifyOutcome {
    let mut out = VerifyOutcome::default();
    let reference = pke_reference();
    out.checks.push(Check::compare(
        "pke B = CAC",
        reference.pk.b().clone(),
        mat(2, 61133, &[36124, 40493, 39554, 16490]),
    ));
    out.checks.push(Check::compare(
        "pke G = 14 + 3374 C",
        reference.pk.g().clone(),
        mat(2, 61133, &[25167, 11090, 55920, 52560]),
    ));
    out.checks.push(Check::compare(
        "pke D = 34125 + 7123 G",
        reference.d.clone(),
        mat(2, 61133, &[56710, 10234, 36665, 40513]),
    ));
    out.checks.push(Check::compare(
        "pke E = DAD",
        reference.e.clone(),
        mat(2, 61133, &[57174, 14133, 7237, 20711]),
    ));
    out.checks.push(Check::compare(
        "pke K = DBD",
        reference.key.clone(),
        mat(2, 61133, &[20609, 51651, 14785, 1448]),
    ));
    out.checks.push(Check::compare(
        "pke E mod 541",
        reference.e.reduce(reference.p).unwrap(),
        mat(2, 541, &[369, 67, 204, 153]),
    ));

    // partial keys through the attack path
    let mut partials = Vec::new();
    for (prime, entries) in [
        (reference.p, [51u64, 256, 178, 366]),
        (reference.q, [43, 10, 95, 92]),
    ] {
        let pk_p = reference.pk.reduce(prime).unwrap();
        let ep = reference.e.reduce(prime).unwrap();
        match pke_attack::recover_partial_key(&pk_p, &ep) {
            Ok(partial) => {
                out.checks.push(Check::compare(
                    &format!("pke partial key mod {}", prime.value()),
                    partial.kp.clone(),
                    mat(2, prime.value(), &entries),
                ));
                partials.push(partial.kp);
            }
            Err(e) => out.checks.push(Check::bool(
                &format!("pke partial key mod {}", prime.value()),
                false,
                e.to_string(),
            )),
        }
    }
    if partials.len() == 2 {
        match crt_recombine(&partials[0], &partials[1]) {
            Ok(k) => out.checks.push(Check::compare(
                "pke CRT recombination",
                k,
                mat(2, 61133, &[20609, 51651, 14785, 1448]),
            )),
            Err(e) => out
                .checks
                .push(Check::bool("pke CRT recombination", false, e.to_string())),
        }
    }

    // full attack versus the decryptor on a fixed message
    let message = mat(2, 61133, &[7, 1, 0, 9]);
    let km = reference.key.mul(&message).unwrap();
    let ct = pke::PatentCiphertext {
        km,
        e: reference.e.clone(),
    };
    match pke_attack::recover_key_and_message(
        &reference.pk,
        &ct,
        reference.p,
        reference.q,
        Some(&reference.key),
    ) {
        Ok((k, msg, report)) => {
            out.checks
                .push(Check::compare("pke attack key", k, reference.key.clone()));
            out.checks
                .push(Check::compare("pke attack message", msg.clone(), message));
            out.checks.push(Check::bool(
                "pke attack verified",
                report.verified == Some(true),
                format!("attempts={}", report.attempts),
            ));
            // the decryptor must agree without the attack reading C
            let sk_view = ct.clone();
            let key_dec = reference
                .c
                .mul(&sk_view.e)
                .unwrap()
                .mul(&reference.c)
                .unwrap();
            let msg_dec = key_dec.inverse().unwrap().mul(&sk_view.km).unwrap();
            out.checks
                .push(Check::compare("pke decryptor agrees", msg_dec, msg));
            let meta = FileMeta::standard(version, None, None);
            let file = matbreak_core::ReportFile::new(meta.clone(), &report, None);
            out.artifacts
                .push(("pke-report.txt".into(), file.to_text()));
            out.artifacts
                .push(("pke-public.txt".into(), reference.pk.to_text(&meta)));
            out.artifacts
                .push(("pke-ciphertext.txt".into(), ct.to_text(&meta)));
        }
        Err(e) => out
            .checks
            .push(Check::bool("pke attack key", false, e.to_string())),
    }

    out.notes.push(
        "the published modulus line reads 6133, but the stated factors give 541*113 = 61133; \
         all printed matrices reproduce bit-exactly over 61133"
            .into(),
    );
    // report the printed scalar solutions as the discrepancy they are
    for (prime, (x0, y0)) in [(reference.p, (220u64, 159u64)), (reference.q, (55, 49))] {
        let gp = reference.pk.g().reduce(prime).unwrap();
        let ap = reference.pk.a().reduce(prime).unwrap();
        let ep = reference.e.reduce(prime).unwrap();
        let dp = ModMatrix::identity(2, prime)
            .scale(x0)
            .add(&gp.scale(y0));
        let satisfied = dp.mul(&ap).unwrap().mul(&dp).unwrap() == ep;
        out.notes.push(format!(
            "published solution (x0,y0)=({x0},{y0}) mod {} {} the reduced system \
             (the printed partial keys are nevertheless correct)",
            prime.value(),
            if satisfied {
                "satisfies"
            } else {
                "does NOT satisfy"
            }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_examples_pass() {
        let kex = verify_kex_example("test");
        assert!(
            kex.all_pass(),
            "kex failures: {:?}",
            kex.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
        );
        let pke = verify_pke_example("test");
        assert!(
            pke.all_pass(),
            "pke failures: {:?}",
            pke.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
        );
    }

    #[test]
    fn discrepancy_notes_are_reported() {
        let pke = verify_pke_example("test");
        assert!(pke.notes.iter().any(|n| n.contains("61133")));
        assert!(pke
            .notes
            .iter()
            .any(|n| n.contains("does NOT satisfy")));
    }
}
