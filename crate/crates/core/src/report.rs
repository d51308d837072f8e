//! Attack outcome reporting and its text format.

use std::time::Duration;

use crate::matrix::ModMatrix;
use crate::textio::{Cursor, FileMeta, ParseError};

/// What a completed attack produced. `verified` is set only when the
/// caller supplied ground truth to compare against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackReport {
    pub recovered_key: ModMatrix,
    pub attempts: u32,
    pub elapsed: Duration,
    pub verified: Option<bool>,
}

/// On-disk form of a report: metadata, the recovered key (and recovered
/// message, when the attack yields one), then `attempts=`, `elapsed_ms=`
/// and optional `verified=` lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportFile {
    pub meta: FileMeta,
    pub recovered_key: ModMatrix,
    pub recovered_message: Option<ModMatrix>,
    pub attempts: u32,
    pub elapsed_ms: f64,
    pub verified: Option<bool>,
}

impl ReportFile {
    pub fn new(meta: FileMeta, report: &AttackReport, message: Option<ModMatrix>) -> Self {
        Self {
            meta,
            recovered_key: report.recovered_key.clone(),
            recovered_message: message,
            attempts: report.attempts,
            // microsecond precision, so the {:.3} text form parses back to
            // the identical f64
            elapsed_ms: report.elapsed.as_micros() as f64 / 1e3,
            verified: report.verified,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.meta.write(&mut out);
        out.push_str("[recovered_k]\n");
        crate::textio::write_matrix(&mut out, &self.recovered_key);
        if let Some(m) = &self.recovered_message {
            out.push_str("[recovered_m]\n");
            crate::textio::write_matrix(&mut out, m);
        }
        out.push_str(&format!("attempts={}\n", self.attempts));
        out.push_str(&format!("elapsed_ms={:.3}\n", self.elapsed_ms));
        if let Some(v) = self.verified {
            out.push_str(&format!("verified={v}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor::new(text)?;
        let meta = cur.parse_meta()?;
        cur.expect_section("recovered_k")?;
        let recovered_key = cur.parse_matrix()?;
        let recovered_message = if cur.at_section("recovered_m") {
            cur.expect_section("recovered_m")?;
            Some(cur.parse_matrix()?)
        } else {
            None
        };
        let attempts = cur
            .expect_key_value("attempts")?
            .parse()
            .map_err(|_| cur.error("bad attempts value"))?;
        let elapsed_ms = cur
            .expect_key_value("elapsed_ms")?
            .parse()
            .map_err(|_| cur.error("bad elapsed_ms value"))?;
        let verified = if cur.at_end() {
            None
        } else {
            Some(
                cur.expect_key_value("verified")?
                    .parse()
                    .map_err(|_| cur.error("bad verified value"))?,
            )
        };
        cur.expect_end()?;
        Ok(Self {
            meta,
            recovered_key,
            recovered_message,
            attempts,
            elapsed_ms,
            verified,
        })
    }
}
