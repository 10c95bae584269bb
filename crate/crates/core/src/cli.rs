//! `seriesreal <command> --config <path> [--out <path>]`.
//!
//! Every command reads one JSON config; file paths inside it are relative to the
//! config's directory. Exit status: 0 success, 2 a check found violations,
//! 1 the input could not be processed (details as JSON on stderr).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::events::{Alphabet, AlphabetConfig, EventsError, Generators, LetterSet, SimpleWord};
use crate::fit::{self, FamilyConfig, FitError, Horizon, ProbeConfig, SearchConfig};
use crate::format::{self, AnySeries, FormatError};
use crate::nerode::{self, NerodeError};
use crate::profiles::{self, Classifier, LearningSet, ProfilesError, StateSpace};
use crate::realize::{self, LinearRealization, RealizeError};
use crate::scalar;
use crate::series::{LabeledSeries, SeriesError, SimpleSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Rank,
    Realize,
    Verify,
    Nerode,
    Regular,
    Fit,
    Simulate,
    Decompose,
}

#[derive(Debug, Parser)]
#[command(name = "seriesreal", about = "Exact realization tools for formal series over event words")]
pub struct Args {
    pub command: Command,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Events(#[from] EventsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Nerode(#[from] NerodeError),
    #[error(transparent)]
    Profiles(#[from] ProfilesError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Config(_) => "config",
            CliError::Format(_) => "format",
            CliError::Events(_) => "events",
            CliError::Series(_) => "series",
            CliError::Realize(_) => "realize",
            CliError::Nerode(_) => "nerode",
            CliError::Profiles(_) => "profiles",
            CliError::Fit(_) => "fit",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": self.kind(), "message": self.to_string()})
    }
}

/// The artifact a command produced and whether its check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifact: String,
    pub passed: bool,
}

impl Outcome {
    fn json<T: Serialize>(v: &T, passed: bool) -> Self {
        let mut artifact = serde_json::to_string_pretty(v).expect("artifact serializes");
        artifact.push('\n');
        Self { artifact, passed }
    }
}

struct Ctx {
    base: PathBuf,
    config: Value,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl Ctx {
    fn load(path: &Path) -> Result<Self, CliError> {
        let config = read_json(path)?;
        if !config.is_object() {
            return Err(config_err("config must be a JSON object"));
        }
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { base, config })
    }

    fn path(&self, rel: &str) -> PathBuf {
        self.base.join(rel)
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.config.get(key)
    }

    fn require(&self, key: &str) -> Result<&Value, CliError> {
        self.get(key).ok_or_else(|| config_err(format!("missing `{key}`")))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| config_err(format!("`{key}` must be a nonnegative integer"))),
        }
    }

    fn usize_req(&self, key: &str) -> Result<usize, CliError> {
        self.require(key)?;
        self.usize_or(key, 0)
    }

    /// An inline JSON value, or a string naming a JSON file.
    fn document(&self, key: &str) -> Result<Value, CliError> {
        match self.require(key)? {
            Value::String(rel) => read_json(&self.path(rel)),
            v => Ok(v.clone()),
        }
    }

    fn typed<T: for<'de> Deserialize<'de>>(&self, key: &str) -> Result<T, CliError> {
        serde_json::from_value(self.document(key)?).map_err(|e| config_err(format!("`{key}`: {e}")))
    }

    fn series(&self) -> Result<AnySeries, CliError> {
        let rel = self
            .require("series")?
            .as_str()
            .ok_or_else(|| config_err("`series` must be a path"))?;
        let path = self.path(rel);
        format::read_series(&read_text(&path)?).map_err(|e| match e {
            FormatError::Line { line, message } => CliError::Format(FormatError::Line {
                line,
                message: format!("{}: {message}", path.display()),
            }),
            other => other.into(),
        })
    }

    fn simple_series(&self) -> Result<SimpleSeries, CliError> {
        match self.series()? {
            AnySeries::Simple(p) => Ok(p),
            AnySeries::Labeled(_) => Err(config_err("this command needs a simple series (a `generators` header)")),
        }
    }

    fn labeled_series(&self) -> Result<LabeledSeries, CliError> {
        match self.series()? {
            AnySeries::Labeled(p) => Ok(p),
            AnySeries::Simple(_) => Err(config_err("this command needs a labeled series (an `alphabet` header)")),
        }
    }

    fn alphabet(&self) -> Result<Alphabet, CliError> {
        let c: AlphabetConfig = self.typed("alphabet")?;
        Ok(Alphabet::try_from(c)?)
    }

    fn space(&self, generators: &Generators) -> Result<StateSpace, CliError> {
        let v = self.document("space")?;
        if v.get("kind").and_then(Value::as_str) == Some("realization") {
            let rel = v
                .get("path")
                .and_then(Value::as_str)
                .ok_or_else(|| config_err("realization space needs `path`"))?;
            let r = LinearRealization::from_json(&read_json(&self.path(rel))?)?;
            let x = StateSpace::from_realization(&r);
            if x.generators() != generators {
                return Err(EventsError::AlphabetMismatch {
                    left: x.generators().describe(),
                    right: generators.describe(),
                }
                .into());
            }
            return Ok(x);
        }
        Ok(StateSpace::from_json(generators, &v)?)
    }

    /// Space, learning set and classifier over `alphabet`, shape-checked together.
    fn triple(&self, alphabet: &Alphabet) -> Result<(StateSpace, LearningSet, Classifier), CliError> {
        let x = self.space(alphabet.generators())?;
        let chi = LearningSet::from_json(alphabet, &self.document("learning_set")?)?;
        chi.check_space(&x)?;
        let f = Classifier::from_json(alphabet, &self.document("classifier")?)?;
        f.check(x.dim(), alphabet.label_count())?;
        Ok((x, chi, f))
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn coeff_table(p: &LabeledSeries) -> Vec<Value> {
    let a = p.space();
    p.iter()
        .map(|(w, c)| {
            json!({
                "word": w.letters().iter().map(|e| a.event_names(e)).collect::<Vec<_>>(),
                "coeff": scalar::format(c),
            })
        })
        .collect()
}

fn rank(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p = ctx.simple_series()?;
    let n = p.truncation();
    let max_prefix = ctx.usize_or("max_prefix", n / 2)?;
    let max_suffix = ctx.usize_or("max_suffix", n - n / 2)?;
    let depth = ctx.usize_or("bracket_depth", (n / 2).min(3))?;
    let eval_len = ctx.usize_or("eval_len", n.saturating_sub(depth))?;
    let hankel = realize::hankel_step(&p, max_prefix, max_suffix)?;
    let lie_rank = realize::lie_rank(&p, depth, eval_len)?;
    let lie_prev = match eval_len {
        0 => None,
        e => Some(realize::lie_rank(&p, depth, e - 1)?),
    };
    let report = json!({
        "truncation": n,
        "hankel": hankel,
        "lie": {
            "bracket_depth": depth,
            "eval_len": eval_len,
            "rank": lie_rank,
            "previous_rank": lie_prev,
            "stabilized": lie_prev == Some(lie_rank),
        },
        "lie_within_hankel_bound": lie_rank <= hankel.rank,
    });
    Ok(Outcome::json(&report, true))
}

fn realize_cmd(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p = ctx.simple_series()?;
    let max_len = ctx.usize_or("max_len", p.truncation() / 2)?;
    let r = realize::realize_from_hankel(&p, max_len)?;
    Ok(Outcome::json(&r.to_json(), true))
}

fn verify(ctx: &Ctx) -> Result<Outcome, CliError> {
    if ctx.get("classifier").is_none() {
        let p = ctx.simple_series()?;
        let r = LinearRealization::from_json(&ctx.document("realization")?)?;
        let mismatch = r.first_mismatch(&p)?;
        let report = json!({
            "horizon": p.truncation(),
            "dim": r.dim(),
            "first_mismatch": mismatch.as_ref().map(|w| r.generators().render(w)),
            "realizes": mismatch.is_none(),
        });
        return Ok(Outcome::json(&report, mismatch.is_none()));
    }
    let p = ctx.labeled_series()?;
    let (x, chi, f) = ctx.triple(p.space())?;
    let n = ctx.usize_or("horizon", p.truncation())?;
    let report = profiles::is_realization(&x, &f, &chi, &p, n)?;
    Ok(Outcome::json(&report, report.realizes()))
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum LanguageConfig {
    /// Anchored pattern over the concatenated generator names.
    Regex { pattern: String },
    /// A finite language.
    Words { words: Vec<Vec<String>> },
    /// Nonzero support of a simple series file.
    Series { path: String },
}

fn nerode_cmd(ctx: &Ctx) -> Result<Outcome, CliError> {
    let lang: LanguageConfig = ctx.typed("language")?;
    let max_prefix = ctx.usize_req("max_prefix")?;
    let max_suffix = ctx.usize_req("max_suffix")?;
    let dfa = match lang {
        LanguageConfig::Regex { pattern } => {
            let g = Generators::new(ctx.typed::<Vec<String>>("generators")?)?;
            if g.names().iter().any(|n| n.chars().count() != 1) {
                return Err(config_err("regex languages need single-character generator names"));
            }
            let re = Regex::new(&format!("^(?:{pattern})$")).map_err(|e| config_err(e.to_string()))?;
            nerode::nerode_automaton(&g, |w: &SimpleWord| re.is_match(&g.render(w).concat()), max_prefix, max_suffix)?
        }
        LanguageConfig::Words { words } => {
            let g = Generators::new(ctx.typed::<Vec<String>>("generators")?)?;
            let set = words
                .iter()
                .map(|w| g.word(w))
                .collect::<Result<std::collections::BTreeSet<_>, _>>()?;
            nerode::nerode_automaton(&g, |w: &SimpleWord| set.contains(w), max_prefix, max_suffix)?
        }
        LanguageConfig::Series { path } => {
            let p = match format::read_series(&read_text(&ctx.path(&path))?)? {
                AnySeries::Simple(p) => p,
                AnySeries::Labeled(_) => return Err(config_err("language series must be simple")),
            };
            if max_prefix + max_suffix > p.truncation() {
                return Err(SeriesError::TruncationExceeded {
                    len: max_prefix + max_suffix,
                    truncation: p.truncation(),
                }
                .into());
            }
            let g = p.space().clone();
            nerode::nerode_automaton(
                &g,
                |w: &SimpleWord| !p.evaluate(w).map(|c| c == scalar::zero()).unwrap_or(true),
                max_prefix,
                max_suffix,
            )?
        }
    };
    Ok(Outcome::json(&dfa, true))
}

fn regular(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p = ctx.labeled_series()?;
    let n = p.truncation();
    let depth = ctx.usize_or("bracket_depth", (n / 2).min(3))?;
    let eval_len = ctx.usize_or("eval_len", n.saturating_sub(depth))?;
    let report = realize::is_regular(&p, depth, eval_len)?;
    Ok(Outcome::json(&report, true))
}

#[derive(Serialize)]
struct FitOutput {
    #[serde(flatten)]
    report: fit::GoodnessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    active_parameters: Option<fit::ActiveReport>,
}

fn fit_cmd(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p = ctx.labeled_series()?;
    let a = p.space().clone();
    let x = ctx.space(a.generators())?;
    let chi = LearningSet::from_json(&a, &ctx.document("learning_set")?)?;
    let family = ctx.typed::<FamilyConfig>("family")?.build(&a, x.dim())?;
    let n = ctx.usize_or("horizon", p.truncation())?;
    let search = SearchConfig {
        epsilon: ctx.get("epsilon").and_then(Value::as_f64).unwrap_or(SearchConfig::default().epsilon),
        budget: ctx.usize_or("budget", SearchConfig::default().budget)?,
    };
    let horizon = Horizon::new(&x, &chi, &p, n)?;
    let report = fit::near_best_search(&family, &horizon, &search)?;
    let active_parameters = match ctx.get("probe") {
        None => None,
        Some(_) => {
            let probe: ProbeConfig = ctx.typed("probe")?;
            Some(fit::active_parameters(&family, &horizon, &a, &probe)?)
        }
    };
    Ok(Outcome::json(
        &FitOutput {
            report,
            active_parameters,
        },
        true,
    ))
}

fn simulate(ctx: &Ctx) -> Result<Outcome, CliError> {
    let a = ctx.alphabet()?;
    let (x, chi, f) = ctx.triple(&a)?;
    let n = ctx.usize_req("horizon")?;
    let p = profiles::series_from_triple(&x, &f, &chi, n)?;
    Ok(Outcome {
        artifact: format::emit_labeled(&p),
        passed: true,
    })
}

fn decompose(ctx: &Ctx) -> Result<Outcome, CliError> {
    let a = ctx.alphabet()?;
    let (x, chi, f) = ctx.triple(&a)?;
    let n = ctx.usize_req("horizon")?;
    let d = fit::decompose(&x, &f, &chi, n)?;
    let parts: serde_json::Map<String, Value> = d
        .parts
        .iter()
        .map(|(l, s)| (a.label_name(*l).to_string(), Value::from(coeff_table(s))))
        .collect();
    let report = json!({
        "horizon": n,
        "total": coeff_table(&d.total),
        "parts": parts,
        "sum_matches": d.mismatches.is_empty(),
        "mismatches": d
            .mismatches
            .iter()
            .map(|w| w.letters().iter().map(|e| a.event_names(e)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    Ok(Outcome::json(&report, d.mismatches.is_empty()))
}

/// Run one command against a config file.
pub fn run(command: Command, config: &Path) -> Result<Outcome, CliError> {
    let ctx = Ctx::load(config)?;
    match command {
        Command::Rank => rank(&ctx),
        Command::Realize => realize_cmd(&ctx),
        Command::Verify => verify(&ctx),
        Command::Nerode => nerode_cmd(&ctx),
        Command::Regular => regular(&ctx),
        Command::Fit => fit_cmd(&ctx),
        Command::Simulate => simulate(&ctx),
        Command::Decompose => decompose(&ctx),
    }
}

/// Parse arguments, run, write the artifact, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            if !e.use_stderr() {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", json!({"error": "usage", "message": e.to_string()}));
            return 1;
        }
    };
    let outcome = run(args.command, &args.config).and_then(|o| {
        match &args.out {
            Some(path) => fs::write(path, &o.artifact).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?,
            None => print!("{}", o.artifact),
        }
        Ok(o)
    });
    match outcome {
        Ok(o) if o.passed => 0,
        Ok(_) => 2,
        Err(e) => {
            eprintln!("{}", e.to_json());
            1
        }
    }
}
