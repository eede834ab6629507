//! Command implementations behind the `regcurve` binary. Each command returns
//! its standard output and exit code instead of printing, so the tests can
//! call them directly.

pub mod render;

use std::fs;
use std::path::{Path, PathBuf};

use regcurve::dsl::{parse_curve, sample_expr};
use regcurve::{
    choose_generic_direction, extract_turn_code, make_gamma, reduce, synthesize_homotopy,
    terminal_index, turning_number, verify_homotopy, CanonicalIndex, CurveError, CurveFile,
    Direction, HomotopyPath, Letter, SampledCurve,
};
use serde_json::json;

pub use render::RenderConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INVALID_INPUT: u8 = 2;
pub const EXIT_GENERICITY: u8 = 3;
pub const EXIT_CLASS_MISMATCH: u8 = 4;
pub const EXIT_SYNTHESIS: u8 = 5;

/// Directions tried by `reduce` before giving up.
pub const DIRECTION_TRIALS: usize = 64;
pub const DEFAULT_SAMPLES: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self::new(EXIT_INVALID_INPUT, message)
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        let code = match &e {
            CurveError::ClassMismatch { .. } => EXIT_CLASS_MISMATCH,
            CurveError::SynthesisFailure { .. } => EXIT_SYNTHESIS,
            CurveError::NoGenericDirection { .. } | CurveError::DegenerateTangency { .. } => {
                EXIT_GENERICITY
            }
            _ => EXIT_INVALID_INPUT,
        };
        let message = match &e {
            CurveError::ClassMismatch { a, b } => format!("{a} != {b}"),
            CurveError::SynthesisFailure { report, .. } => format!("{e}\n{}", report.summary()),
            _ => e.to_string(),
        };
        CliError { code, message }
    }
}

/// What a command prints and how it exits when it ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
        }
    }
}

pub type CmdResult = Result<Outcome, CliError>;

/// Where a curve comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSource {
    Expr(String),
    File(PathBuf),
    Canonical(CanonicalIndex),
}

impl CurveSource {
    /// `gamma:K`, `gamma0prime`, an existing file, or inline DSL text.
    pub fn parse(arg: &str) -> Result<Self, CliError> {
        if let Some(k) = arg.strip_prefix("gamma:") {
            let k = k
                .parse()
                .map_err(|_| CliError::invalid(format!("bad canonical index `{k}`")))?;
            return Ok(CurveSource::Canonical(CanonicalIndex::GammaK(k)));
        }
        if arg == "gamma0prime" || arg == "gamma0'" {
            return Ok(CurveSource::Canonical(CanonicalIndex::Gamma0Primed));
        }
        if Path::new(arg).exists() {
            return Ok(CurveSource::File(arg.into()));
        }
        if arg.contains('=') {
            return Ok(CurveSource::Expr(arg.into()));
        }
        Err(CliError::invalid(format!("`{arg}` is not a file, a canonical curve or a curve expression")))
    }

    /// The sampled curve; `n` applies to expressions and canonical curves,
    /// JSON files keep their own sample count.
    pub fn load(&self, n: usize) -> Result<SampledCurve, CliError> {
        match self {
            CurveSource::Expr(src) => from_dsl(src, n),
            CurveSource::Canonical(index) => Ok(make_gamma(*index, n)?),
            CurveSource::File(path) => {
                let text = read(path)?;
                if is_json(path, &text) {
                    let file: CurveFile = serde_json::from_str(&text)
                        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
                    Ok(file.into_curve()?)
                } else {
                    from_dsl(&text, n)
                }
            }
        }
    }
}

fn from_dsl(src: &str, n: usize) -> Result<SampledCurve, CliError> {
    Ok(sample_expr(&parse_curve(src)?, n)?)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn is_json(path: &Path, text: &str) -> bool {
    path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with(['{', '['])
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let fail = |e: std::io::Error| CliError::invalid(format!("cannot write {}: {e}", path.display()));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::invalid(format!("cannot write {}: not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes).map_err(fail)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        fail(e)
    })
}

/// Prints the turning number.
pub fn cmd_r(source: &CurveSource, n: usize, as_json: bool) -> CmdResult {
    let r = turning_number(&source.load(n)?)?;
    Ok(Outcome::ok(if as_json {
        format!("{}\n", json!({ "turning_number": r }))
    } else {
        format!("{r}\n")
    }))
}

#[derive(Debug, Clone, Default)]
pub struct ReduceOptions {
    pub seed: u64,
    /// Angle of `l` in radians; chosen from `seed` when absent.
    pub direction: Option<f64>,
    /// Receives the reduction trace as JSON lines.
    pub trace_out: Option<PathBuf>,
    pub json: bool,
}

/// Extracts the turn code along a generic direction and reduces it.
pub fn cmd_reduce(source: &CurveSource, n: usize, options: &ReduceOptions) -> CmdResult {
    let curve = source.load(n)?;
    let l = match options.direction {
        Some(angle) if angle.is_finite() => Direction::from_angle(angle),
        Some(angle) => return Err(CliError::invalid(format!("bad direction {angle}"))),
        None => choose_generic_direction(&curve, DIRECTION_TRIALS, options.seed)?,
    };
    let code = extract_turn_code(&curve, l)?;
    let word = code.word();
    let (index, trace) = reduce(&word);
    let (nl, nr) = (code.count(Letter::L), code.count(Letter::R));
    // the letters end at LR; the realized curve says which figure-eight
    let resolved = match trace.note {
        Some(_) => Some(terminal_index(&code).map_err(|e| CliError::new(EXIT_SYNTHESIS, e.to_string()))?),
        None => None,
    };

    if let Some(path) = &options.trace_out {
        let mut lines = format!(
            "{}\n",
            json!({ "kind": "code", "direction": l.angle(), "word": word.to_string() })
        );
        lines.push_str(&trace.to_json_lines());
        if let Some(r) = resolved {
            lines.push_str(&format!("{}\n", json!({ "kind": "resolved", "index": r.to_string() })));
        }
        write_atomic(path, lines.as_bytes())?;
    }

    let stdout = if options.json {
        let mut out = json!({
            "index": index.to_string(),
            "turning_number": index.turning_number(),
            "L": nl,
            "R": nr,
            "direction": l.angle(),
            "word": word.to_string(),
            "cancellations": trace.cancel_count(),
        });
        if let (Some(note), Some(r)) = (&trace.note, resolved) {
            out["note"] = note.clone().into();
            out["resolved"] = r.to_string().into();
        }
        format!("{out}\n")
    } else {
        let mut out = format!("{index}, L={nl} R={nr}\n");
        if let (Some(note), Some(r)) = (&trace.note, resolved) {
            out.push_str(&format!("note: {note} resolved by orientation: {r}\n"));
        }
        out.push_str(&format!("direction: {:.6}\nword: {word}\n", l.angle()));
        out
    };
    Ok(Outcome::ok(stdout))
}

#[derive(Debug, Clone)]
pub struct HomotopyOptions {
    /// Path JSON goes here, the SVG strip next to it with extension `svg`.
    pub out: PathBuf,
    pub max_frames: usize,
    pub render: RenderConfig,
    pub json: bool,
}

/// Synthesizes, verifies and writes a homotopy from `a` to `b`.
pub fn cmd_homotopy(a: &CurveSource, b: &CurveSource, n: usize, options: &HomotopyOptions) -> CmdResult {
    options.render.validate().map_err(CliError::invalid)?;
    let (ca, cb) = (a.load(n)?, b.load(n)?);
    let (ra, rb) = (turning_number(&ca)?, turning_number(&cb)?);
    if ra != rb {
        return Err(CurveError::ClassMismatch { a: ra, b: rb }.into());
    }
    let path = synthesize_homotopy(&ca, &cb)?;
    let report = verify_homotopy(&path)?;
    if !report.pass {
        return Err(CliError::new(EXIT_SYNTHESIS, report.summary()));
    }
    write_atomic(&options.out, path.to_json().as_bytes())?;
    let svg = render::render_path(&path, options.max_frames, &options.render);
    let svg_out = options.out.with_extension("svg");
    write_atomic(&svg_out, svg.as_bytes())?;
    Ok(Outcome::ok(if options.json {
        format!(
            "{}\n",
            json!({ "frames": path.len(), "turning_number": ra, "report": report })
        )
    } else {
        format!("frames: {}\n{}", path.len(), report.summary())
    }))
}

/// Verifies a homotopy file; exits 1 when a check fails.
pub fn cmd_verify(path_file: &Path, as_json: bool) -> CmdResult {
    let path = HomotopyPath::from_json(&read(path_file)?)?;
    let report = verify_homotopy(&path).map_err(|e| CliError::invalid(e.to_string()))?;
    let stdout = if as_json {
        format!("{}\n", report.to_json())
    } else {
        report.summary()
    };
    Ok(Outcome {
        code: if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED },
        stdout,
    })
}

/// Anything `render` can draw.
#[derive(Debug, Clone, PartialEq)]
pub enum RenderSource {
    Curve(CurveSource),
    /// A homotopy path JSON file.
    Path(PathBuf),
}

impl RenderSource {
    /// Files holding a JSON array are homotopy paths.
    pub fn parse(arg: &str) -> Result<Self, CliError> {
        let source = CurveSource::parse(arg)?;
        if let CurveSource::File(path) = &source {
            if read(path)?.trim_start().starts_with('[') {
                return Ok(RenderSource::Path(path.clone()));
            }
        }
        Ok(RenderSource::Curve(source))
    }
}

/// Writes an SVG of a curve, or a frame strip of a path.
pub fn cmd_render(
    source: &RenderSource,
    n: usize,
    out: &Path,
    max_frames: usize,
    config: &RenderConfig,
) -> CmdResult {
    config.validate().map_err(CliError::invalid)?;
    let (svg, count) = match source {
        RenderSource::Curve(c) => (render::render_curve(&c.load(n)?, config), 1),
        RenderSource::Path(p) => {
            let path = HomotopyPath::from_json(&read(p)?)?;
            let count = render::select_frames(&path, max_frames).len();
            (render::render_path(&path, max_frames, config), count)
        }
    };
    write_atomic(out, svg.as_bytes())?;
    let frames = if count == 1 { "frame" } else { "frames" };
    Ok(Outcome::ok(format!("wrote {} ({count} {frames})\n", out.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_specs() {
        assert_eq!(
            CurveSource::parse("gamma:-3").unwrap(),
            CurveSource::Canonical(CanonicalIndex::GammaK(-3))
        );
        assert_eq!(
            CurveSource::parse("gamma0prime").unwrap(),
            CurveSource::Canonical(CanonicalIndex::Gamma0Primed)
        );
        assert!(matches!(CurveSource::parse("x = t; y = t").unwrap(), CurveSource::Expr(_)));
        assert_eq!(CurveSource::parse("gamma:x").unwrap_err().code, EXIT_INVALID_INPUT);
        assert_eq!(CurveSource::parse("no/such/file").unwrap_err().code, EXIT_INVALID_INPUT);
    }

    #[test]
    fn error_codes() {
        let e: CliError = CurveError::ClassMismatch { a: 0, b: 1 }.into();
        assert_eq!((e.code, e.message.as_str()), (EXIT_CLASS_MISMATCH, "0 != 1"));
        let e: CliError = CurveError::NoGenericDirection { trials: 3 }.into();
        assert_eq!(e.code, EXIT_GENERICITY);
        let e: CliError = CurveError::NotClosed { gap: 1.0 }.into();
        assert_eq!(e.code, EXIT_INVALID_INPUT);
    }

    #[test]
    fn r_of_circle_and_figure_eight() {
        let circle = CurveSource::parse("x = cos(t); y = sin(t)").unwrap();
        assert_eq!(cmd_r(&circle, 256, false).unwrap().stdout, "1\n");
        let eight = CurveSource::parse("x = sin(2*t); y = sin(t)").unwrap();
        assert_eq!(cmd_r(&eight, 256, false).unwrap().stdout, "0\n");
        assert_eq!(cmd_r(&eight, 256, true).unwrap().stdout, "{\"turning_number\":0}\n");
    }

    #[test]
    fn reduce_circle() {
        let circle = CurveSource::Canonical(CanonicalIndex::GammaK(1));
        let out = cmd_reduce(&circle, 256, &ReduceOptions::default()).unwrap();
        assert!(out.stdout.starts_with("gamma(1), L=2 R=0\n"), "{}", out.stdout);
    }

    #[test]
    fn atomic_write_leaves_no_temp_file() {
        let dir = std::env::temp_dir().join(format!("regcurve-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let target = dir.join("out.txt");
        write_atomic(&target, b"one").unwrap();
        write_atomic(&target, b"two").unwrap();
        assert_eq!(fs::read(&target).unwrap(), b"two");
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        fs::remove_dir_all(&dir).unwrap();
        assert_eq!(write_atomic(&dir.join("missing/x"), b"").unwrap_err().code, EXIT_INVALID_INPUT);
    }
}
