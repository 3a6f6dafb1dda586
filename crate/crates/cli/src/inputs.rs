//! Reading inputs, named fixtures and atomic output.

use std::fs;
use std::io::Write;
use std::path::Path;

use symjoin::complex::ComplexFile;
use symjoin::joins::{FamilyFile, JoinComplexFile};
use symjoin::{fixtures, Complex, Family, JoinComplex};

use crate::failure::{CliError, ExitClass};

/// Any of the three JSON input shapes.
pub enum Input {
    Complex(Complex),
    Family(Family),
    Join(JoinComplex),
}

pub const FIXTURES: &[&str] = &[
    "tiny-m2r2",
    "rp2",
    "rp2-triple",
    "skeleta-triple",
    "bier-m4",
];

pub fn fixture(name: &str) -> Result<Input, CliError> {
    Ok(match name {
        "tiny-m2r2" => Input::Family(fixtures::two_points()),
        "rp2" => Input::Complex(Complex::rp2_minimal()),
        "rp2-triple" => Input::Family(fixtures::rp2_triple()),
        "skeleta-triple" => Input::Family(fixtures::skeleta_triple()),
        "bier-m4" => {
            let (k, dual) = fixtures::bier_pair_m4();
            Input::Family(Family::new(vec![k, dual])?)
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown fixture '{other}' (expected one of {})",
                FIXTURES.join(", ")
            )))
        }
    })
}

/// Parses a complex, family or join complex file, trying the richest shape first.
pub fn parse_input(text: &str) -> Result<Input, CliError> {
    if let Ok(file) = serde_json::from_str::<JoinComplexFile>(text) {
        return Ok(Input::Join(JoinComplex::from_file(&file)?));
    }
    if let Ok(file) = serde_json::from_str::<FamilyFile>(text) {
        return Ok(Input::Family(Family::from_file(&file)?));
    }
    match serde_json::from_str::<ComplexFile>(text) {
        Ok(file) => Ok(Input::Complex(Complex::from_file(&file)?)),
        Err(e) => Err(CliError::new(
            ExitClass::Input,
            format!("not a complex, family or join complex file: {e}"),
        )),
    }
}

pub fn read_input(path: &Path) -> Result<Input, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(ExitClass::Input, format!("{}: {e}", path.display())))?;
    parse_input(&text)
}

pub fn load(input: Option<&Path>, fixture_name: Option<&str>) -> Result<Input, CliError> {
    match (input, fixture_name) {
        (Some(p), None) => read_input(p),
        (None, Some(f)) => fixture(f),
        _ => Err(CliError::usage("give exactly one of --input or --fixture")),
    }
}

pub fn load_family(path: &Path) -> Result<Family, CliError> {
    match read_input(path)? {
        Input::Family(f) => Ok(f),
        Input::Complex(c) => Ok(Family::new(vec![c])?),
        Input::Join(j) => Ok(j.family().clone()),
    }
}

/// Writes through a temporary file in the target directory and renames it, so
/// readers never observe a half-written artifact.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::usage(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::new(
            ExitClass::Input,
            format!("writing {}: {e}", path.display()),
        ));
    }
    Ok(())
}

/// Writes `contents` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            if !contents.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

pub fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_are_told_apart() {
        let c = Complex::rp2_minimal().to_json();
        assert!(matches!(parse_input(&c).unwrap(), Input::Complex(_)));
        let f = serde_json::to_string(&fixtures::two_points().to_file()).unwrap();
        assert!(matches!(parse_input(&f).unwrap(), Input::Family(_)));
        let j = JoinComplex::symmetrized(&fixtures::two_points());
        let j = serde_json::to_string(&j.to_file()).unwrap();
        assert!(matches!(parse_input(&j).unwrap(), Input::Join(_)));
        assert!(parse_input("{\"x\": 1}").is_err());
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = std::env::temp_dir().join(format!("symjoin-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join("out.json");
        write_atomic(&p, "first").unwrap();
        write_atomic(&p, "second").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "second");
        fs::remove_dir_all(&dir).unwrap();
    }
}
