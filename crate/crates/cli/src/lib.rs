//! Command-line front end: parses a `.tpx` file and runs one command on it.
//!
//! Exit codes: 0 success, 1 error, 2 the result is `null` (nullified),
//! 3 a negative verdict (`eq` found a difference, `check-net` found a
//! violation), 4 `eq` could not decide.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use tuplix::calculus::{compare, normalize_with, NormalizeOptions, Tuplix, Verdict};
use tuplix::ftn::{self, classify, validate_ftn, Class, Network};
use tuplix::json::basic_form_to_json;
use tuplix::syntax::parse_tuplix_in;
use tuplix::workspace::Workspace;
use tuplix::{BasicForm, Symbol};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NULL: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "tuplix", version, about = "Normalize and compare tuplix terms and transfer networks")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Report each operator elimination.
    #[arg(long, global = true)]
    pub trace: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the basic form of a named term (or of a term written inline).
    Normalize { file: PathBuf, term: String },
    /// Compare two terms: equal, not equal, or unknown.
    Eq { file: PathBuf, a: String, b: String },
    /// Validate a network and classify its attributes.
    CheckNet { file: PathBuf, net: String },
    /// Compose the specifications of some units (default: all specified
    /// units) and encapsulate the channels internal to them.
    Encapsulate {
        file: PathBuf,
        net: String,
        units: Vec<String>,
    },
    /// Show the transactions of one unit under the encapsulation.
    Focus { file: PathBuf, net: String, unit: String },
    /// Apply the Kirchhoff operator to a term.
    Flux { file: PathBuf, term: String },
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn error(message: impl AsRef<str>) -> Report {
        Report {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {}\n", message.as_ref()),
        }
    }
}

pub fn run_args<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Report {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Report {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Report {
    let file = match &cli.command {
        Command::Normalize { file, .. }
        | Command::Eq { file, .. }
        | Command::CheckNet { file, .. }
        | Command::Encapsulate { file, .. }
        | Command::Focus { file, .. }
        | Command::Flux { file, .. } => file,
    };
    let src = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => return Report::error(format!("{}: {e}", file.display())),
    };
    let ws = match Workspace::parse(&src) {
        Ok(ws) => ws,
        Err(errors) => {
            let mut stderr = String::new();
            for e in errors {
                let _ = writeln!(stderr, "{}:{e}", file.display());
            }
            return Report {
                code: EXIT_ERROR,
                stdout: String::new(),
                stderr,
            };
        }
    };
    let ctx = Ctx { cli, ws: &ws };
    let result = match &cli.command {
        Command::Normalize { term, .. } => ctx.normalize(term),
        Command::Eq { a, b, .. } => ctx.eq(a, b),
        Command::CheckNet { net, .. } => ctx.check_net(net),
        Command::Encapsulate { net, units, .. } => ctx.encapsulate(net, units),
        Command::Focus { net, unit, .. } => ctx.focus(net, unit),
        Command::Flux { term, .. } => ctx.flux(term),
    };
    result.unwrap_or_else(Report::error)
}

struct Ctx<'a> {
    cli: &'a Cli,
    ws: &'a Workspace,
}

impl Ctx<'_> {
    fn options(&self) -> NormalizeOptions {
        let mut opts = self.ws.normalize_options();
        opts.trace |= self.cli.trace;
        opts
    }

    /// A `let` name, a specified unit, or failing both an inline term.
    fn term(&self, name: &str) -> Result<Tuplix, String> {
        if let Some(t) = self.ws.term(name) {
            return Ok(t.clone());
        }
        parse_tuplix_in(name, self.ws).map_err(|errors| {
            let first = errors.first().map(|e| e.to_string()).unwrap_or_default();
            format!("`{name}` is neither a defined term nor a parsable term ({first})")
        })
    }

    fn network(&self, name: &str) -> Result<&Network, String> {
        self.ws
            .network(name)
            .ok_or_else(|| format!("no network named `{name}`"))
    }

    fn symbol(name: &str) -> Result<Symbol, String> {
        name.parse().map_err(|e: tuplix::symbol::InvalidSymbol| e.to_string())
    }

    fn run_normalize(&self, p: &Tuplix) -> Result<(BasicForm, Vec<String>), String> {
        let out = normalize_with(p, &self.options()).map_err(|e| e.to_string())?;
        Ok((out.form, out.trace))
    }

    /// Prints a basic form; `null` exits with [`EXIT_NULL`].
    fn form_report(&self, form: &BasicForm, trace: Vec<String>, null_text: &str) -> Report {
        let nullified = form.is_delta();
        let code = if nullified { EXIT_NULL } else { EXIT_OK };
        if self.cli.json {
            let mut v = json!({
                "form": basic_form_to_json(form),
                "text": form.to_string(),
                "nullified": nullified,
            });
            if self.options().trace {
                v["trace"] = json!(trace);
            }
            return Report {
                code,
                stdout: format!("{}\n", pretty(&v)),
                stderr: String::new(),
            };
        }
        let mut stderr = String::new();
        for line in trace {
            let _ = writeln!(stderr, "trace: {line}");
        }
        let stdout = if nullified {
            if null_text != "nullified" {
                stderr.push_str("nullified\n");
            }
            format!("{null_text}\n")
        } else {
            format!("{form}\n")
        };
        Report {
            code,
            stdout,
            stderr,
        }
    }

    fn normalize(&self, name: &str) -> Result<Report, String> {
        let p = self.term(name)?;
        let (form, trace) = self.run_normalize(&p)?;
        Ok(self.form_report(&form, trace, "null"))
    }

    fn flux(&self, name: &str) -> Result<Report, String> {
        let p = self.term(name)?;
        let k = Tuplix::Kirch(tuplix::DataTerm::zero(), Box::new(p));
        let (form, trace) = self.run_normalize(&k)?;
        Ok(self.form_report(&form, trace, "nullified"))
    }

    fn eq(&self, a: &str, b: &str) -> Result<Report, String> {
        let (fa, _) = self.run_normalize(&self.term(a)?)?;
        let (fb, _) = self.run_normalize(&self.term(b)?)?;
        let verdict = compare(&fa, &fb, &self.ws.decision());
        let code = match verdict {
            Verdict::Equal => EXIT_OK,
            Verdict::NotEqual(_) => EXIT_NEGATIVE,
            Verdict::Unknown(_) => EXIT_UNKNOWN,
        };
        let stdout = if self.cli.json {
            let (kind, detail) = match &verdict {
                Verdict::Equal => ("equal", None),
                Verdict::NotEqual(d) => ("not_equal", Some(d.clone())),
                Verdict::Unknown(d) => ("unknown", Some(d.clone())),
            };
            let v = json!({
                "verdict": kind,
                "detail": detail,
                "left": fa.to_string(),
                "right": fb.to_string(),
            });
            format!("{}\n", pretty(&v))
        } else {
            format!("{verdict}\n")
        };
        Ok(Report {
            code,
            stdout,
            stderr: String::new(),
        })
    }

    fn check_net(&self, name: &str) -> Result<Report, String> {
        let net = self.network(name)?;
        let report = validate_ftn(net);
        let mut problems: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        for (unit, spec) in &self.ws.specs {
            if net.units.contains_key(unit) {
                let bad = ftn::check_unit_spec(net, spec).map_err(|e| e.to_string())?;
                problems.extend(bad.iter().map(|v| v.to_string()));
            }
        }
        let (mut internal, mut external) = (Vec::new(), Vec::new());
        for a in &net.attrs {
            match classify(net, a).map_err(|e| e.to_string())? {
                Class::Internal => internal.push(a.to_string()),
                Class::External => external.push(a.to_string()),
            }
        }
        let notes: Vec<String> = report
            .self_channels
            .iter()
            .map(|(u, a)| format!("unit `{u}` both receives and sends over `{a}`"))
            .collect();
        let code = if problems.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
        let stdout = if self.cli.json {
            let v = json!({
                "ok": problems.is_empty(),
                "violations": problems,
                "internal": internal,
                "external": external,
                "notes": notes,
            });
            format!("{}\n", pretty(&v))
        } else {
            let mut s = String::new();
            let status = if problems.is_empty() { "ok" } else { "invalid" };
            let _ = writeln!(
                s,
                "{status}; internal: {{{}}}; external: {{{}}}",
                internal.join(","),
                external.join(",")
            );
            for p in &problems {
                let _ = writeln!(s, "violation: {p}");
            }
            for n in &notes {
                let _ = writeln!(s, "note: {n}");
            }
            s
        };
        Ok(Report {
            code,
            stdout,
            stderr: String::new(),
        })
    }

    /// The named units, or every unit of `net` that has a specification.
    fn units(&self, net: &Network, names: &[String]) -> Result<Vec<Symbol>, String> {
        if names.is_empty() {
            let all: Vec<Symbol> = net
                .units
                .keys()
                .filter(|u| self.ws.specs.contains_key(*u))
                .cloned()
                .collect();
            if all.is_empty() {
                return Err("no unit of the network has a specification".into());
            }
            return Ok(all);
        }
        names.iter().map(|n| Self::symbol(n)).collect()
    }

    fn encapsulate(&self, net_name: &str, names: &[String]) -> Result<Report, String> {
        let net = self.network(net_name)?;
        let units = self.units(net, names)?;
        let specs = self.ws.specs_of(net, &units)?;
        let p = ftn::composition(net, &specs, None).map_err(|e| e.to_string())?;
        let (form, trace) = self.run_normalize(&p)?;
        Ok(self.form_report(&form, trace, "null"))
    }

    fn focus(&self, net_name: &str, unit: &str) -> Result<Report, String> {
        let net = self.network(net_name)?;
        let units = self.units(net, &[])?;
        let specs = self.ws.specs_of(net, &units)?;
        let g = Self::symbol(unit)?;
        let p = ftn::focus_term(net, &specs, &g).map_err(|e| e.to_string())?;
        let (form, trace) = self.run_normalize(&p)?;
        Ok(self.form_report(&form, trace, "null"))
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}
