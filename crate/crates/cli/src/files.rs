//! Small artifact files the harness reads and writes beyond the core
//! formats: single-matrix files (messages, ground-truth keys) and
//! key-exchange parameter files.

use matbreak_core::{
    kex::KexParams,
    textio::{write_matrix, Cursor},
    FileMeta, ModMatrix, ParseError,
};

/// A file holding one named matrix section, e.g. `[K]` or `[M]`.
pub fn matrix_file_text(meta: &FileMeta, section: &str, m: &ModMatrix) -> String {
    let mut out = String::new();
    meta.write(&mut out);
    out.push_str(&format!("[{section}]\n"));
    write_matrix(&mut out, m);
    out
}

pub fn parse_matrix_file(text: &str, section: &str) -> Result<(ModMatrix, FileMeta), ParseError> {
    let mut cur = Cursor::new(text)?;
    let meta = cur.parse_meta()?;
    cur.expect_section(section)?;
    let m = cur.parse_matrix()?;
    cur.expect_end()?;
    Ok((m, meta))
}

/// Key-exchange parameter file: `[meta]` then `[params]` holding M1, M2.
pub fn params_file_text(meta: &FileMeta, params: &KexParams) -> String {
    let mut out = String::new();
    meta.write(&mut out);
    out.push_str("[params]\n");
    write_matrix(&mut out, params.m1());
    write_matrix(&mut out, params.m2());
    out
}

pub fn parse_params_file(text: &str) -> Result<(KexParams, FileMeta), ParseError> {
    let mut cur = Cursor::new(text)?;
    let meta = cur.parse_meta()?;
    cur.expect_section("params")?;
    let m1 = cur.parse_matrix()?;
    let m2 = cur.parse_matrix()?;
    cur.expect_end()?;
    let params = KexParams::new(m1, m2).map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok((params, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use matbreak_core::{kex, Modulus, SeededRng};

    #[test]
    fn matrix_file_roundtrip() {
        let m = ModMatrix::identity(2, Modulus::new(7).unwrap());
        let meta = FileMeta::standard("0.1.0", None, Some(3));
        let text = matrix_file_text(&meta, "K", &m);
        let (back, meta2) = parse_matrix_file(&text, "K").unwrap();
        assert_eq!(back, m);
        assert_eq!(matrix_file_text(&meta2, "K", &back), text);
    }

    #[test]
    fn params_file_roundtrip() {
        let mut rng = SeededRng::new(5);
        let params = kex::keygen(Modulus::new(65521).unwrap(), 3, &mut rng).unwrap();
        let meta = FileMeta::standard("0.1.0", Some("xoshiro256**"), Some(5));
        let text = params_file_text(&meta, &params);
        let (back, meta2) = parse_params_file(&text).unwrap();
        assert_eq!(back, params);
        assert_eq!(params_file_text(&meta2, &back), text);
    }
}
