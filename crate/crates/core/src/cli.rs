//! Command-line front end: `sample`, `count`, `pmf`, `compare`, `check`, `report`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::asymptotics::{estimate_log_count, AcceptabilityParams};
use crate::domain::{DegreeSequence, Shape};
use crate::error::{Error, Result};
use crate::exact::exact_pmf;
use crate::harness::{
    paired_model, run, write_samples_jsonl, Experiment, ExperimentConfig, ExperimentReport, OutputFormat,
    SampleRecord,
};
use crate::models::{checked_count, log_pmf_detailed, CountProvider};
use crate::sampling::{sample_degree_stream, EdgeProb, Family, ModelParam, ModelSpec};

/// Exit status for a run whose verdicts did not all pass.
pub const VERDICT_FAILURE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "bidegree", version, about = "Degree sequences of random bipartite graphs and loop-free digraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw degree sequences and write them as JSON lines.
    Sample(Opts),
    /// Count graphs with the given degrees, exactly or by the asymptotic formula.
    Count(Opts),
    /// Probability of one degree sequence under a model.
    Pmf(Opts),
    /// Compare a graph model with its approximating binomial model.
    Compare(Opts),
    /// Run an experiment and print its verdicts.
    Check(ExperimentOpts),
    /// Run an experiment and emit the full report.
    Report(ExperimentOpts),
}

#[derive(Debug, Args)]
pub struct ExperimentOpts {
    /// ratio, tv_exact, concentration, expectation_R, enum_accuracy or normalization
    pub experiment: String,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Args, Default)]
pub struct Opts {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Loop-free digraph on n vertices instead of an m×n bipartite graph.
    #[arg(long)]
    pub digraph: bool,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "count-mode", default_value = "exact")]
    pub count_mode: String,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub creg: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    /// Side lengths for trend experiments, e.g. 6,8,10.
    #[arg(long)]
    pub sizes: Option<String>,
}

fn parse_csv<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Error::config(format!("bad entry '{x}' in --{what}"))))
        .collect()
}

impl Opts {
    pub fn shape(&self) -> Result<Shape> {
        let n = self.n.ok_or_else(|| Error::config("--n is required"))?;
        if self.digraph {
            if self.m.is_some_and(|m| m != n) {
                return Err(Error::config("a loop-free digraph needs --m equal to --n"));
            }
            Shape::digraph(n)
        } else {
            Shape::new(self.m.ok_or_else(|| Error::config("--m is required"))?, n)
        }
    }

    pub fn model_spec(&self) -> Result<ModelSpec> {
        let family: Family = self
            .model
            .as_deref()
            .ok_or_else(|| Error::config("--model is required"))?
            .parse()?;
        let shape = self.shape()?;
        // --t is the model parameter for G_t and B_t, and otherwise only a degree vector.
        let param = match family {
            Family::Gt | Family::Bt => ModelParam::T(parse_csv(
                self.t.as_deref().ok_or_else(|| Error::config("--t is required for this model"))?,
                "t",
            )?),
            Family::Gk | Family::Bk => {
                ModelParam::K(self.k.ok_or_else(|| Error::config("--k is required for this model"))?)
            }
            _ => ModelParam::P(EdgeProb::parse_decimal(
                self.p.as_deref().ok_or_else(|| Error::config("--p is required for this model"))?,
            )?),
        };
        ModelSpec::new(family, shape, param)
    }

    pub fn degree_sequence(&self) -> Result<DegreeSequence> {
        let s = parse_csv(self.s.as_deref().ok_or_else(|| Error::config("--s is required"))?, "s")?;
        let t = parse_csv(self.t.as_deref().ok_or_else(|| Error::config("--t is required"))?, "t")?;
        DegreeSequence::new(self.shape()?, s, t)
    }

    pub fn counts(&self) -> Result<CountProvider> {
        self.count_mode.parse()
    }

    fn format(&self, default: OutputFormat) -> Result<OutputFormat> {
        self.format.as_deref().map_or(Ok(default), str::parse)
    }

    pub fn regularity(&self) -> AcceptabilityParams {
        let d = AcceptabilityParams::default();
        AcceptabilityParams {
            a: self.a.unwrap_or(d.a),
            eps: self.eps.unwrap_or(d.eps),
            c_reg: self.creg.unwrap_or(d.c_reg),
        }
    }

    /// Builds an experiment config from the flags. `--model` may be left out
    /// for experiments that do not use one.
    pub fn experiment_config(&self, experiment: Experiment) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(experiment)
            .trials(self.trials)
            .seed(self.seed)
            .count_mode(self.counts()?)
            .regularity(self.regularity())
            .digraph(self.digraph);
        if let Some(sizes) = &self.sizes {
            cfg = cfg.sizes(parse_csv(sizes, "sizes")?);
        }
        if self.model.is_some() {
            let model = self.model_spec()?;
            if matches!(experiment, Experiment::Ratio | Experiment::TvExact) {
                cfg = cfg.model_prime(paired_model(&model)?);
            }
            cfg = cfg.model(model);
        }
        cfg.output = self.out.clone();
        cfg.format = self.format(OutputFormat::Json)?;
        Ok(cfg)
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                writeln!(stdout)?;
            }
        }
    }
    Ok(())
}

fn emit_report(report: &ExperimentReport, cfg: &ExperimentConfig) -> Result<u8> {
    emit(&report.render(cfg.format)?, cfg.output.as_ref())?;
    Ok(if report.passed() { 0 } else { VERDICT_FAILURE })
}

fn cmd_sample(o: &Opts) -> Result<u8> {
    let model = o.model_spec()?;
    let samples = sample_degree_stream(&model, o.trials, o.seed)?;
    let text = match o.format(OutputFormat::Jsonl)? {
        OutputFormat::Jsonl => {
            let mut buf = Vec::new();
            write_samples_jsonl(&samples, &mut buf)?;
            String::from_utf8(buf).expect("json is utf-8")
        }
        OutputFormat::Json => {
            let records: Vec<SampleRecord> =
                samples.iter().enumerate().map(|(r, ds)| SampleRecord::new(r as u64, ds)).collect();
            serde_json::to_string_pretty(&records).map_err(|e| Error::Io(e.to_string()))?
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(["trial", "k", "s", "t"]).map_err(io)?;
            for (r, ds) in samples.iter().enumerate() {
                let join = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                w.write_record([r.to_string(), ds.row_sum().to_string(), join(ds.s()), join(ds.t())])
                    .map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("utf-8")
        }
    };
    emit(&text, o.out.as_ref())?;
    Ok(0)
}

fn cmd_count(o: &Opts) -> Result<u8> {
    let ds = o.degree_sequence()?;
    let value = match o.counts()? {
        CountProvider::Exact => {
            let c = checked_count(&ds)?;
            json!({
                "shape": ds.shape().to_string(),
                "count": c.value.to_string(),
                "ln_count": crate::domain::ln_biguint(&c.value),
                "method": format!("{:?}", c.method),
            })
        }
        CountProvider::Asymptotic => {
            let e = estimate_log_count(&ds)?;
            json!({
                "shape": ds.shape().to_string(),
                "ln_estimate": e.ln_estimate,
                "estimate": e.ln_estimate.exp(),
                "a": e.a,
                "b": e.b,
                "cross": e.cross,
            })
        }
    };
    emit(&serde_json::to_string_pretty(&value).expect("json"), o.out.as_ref())?;
    Ok(0)
}

fn cmd_pmf(o: &Opts) -> Result<u8> {
    let model = o.model_spec()?;
    let ds = o.degree_sequence()?;
    let detailed = log_pmf_detailed(&model, &ds, o.counts()?)?;
    if let Some(w) = &detailed.warning {
        eprintln!("warning: {w}");
    }
    let rational = exact_pmf(&model, &ds)
        .ok()
        .and_then(|p| p.exact().map(ToString::to_string));
    let value = json!({
        "model": model.to_string(),
        "ln_prob": detailed.prob.ln(),
        "prob": detailed.prob.value(),
        "exact": rational,
    });
    emit(&serde_json::to_string_pretty(&value).expect("json"), o.out.as_ref())?;
    Ok(0)
}

fn cmd_compare(o: &Opts) -> Result<u8> {
    let cfg = o.experiment_config(Experiment::Ratio)?;
    let report = run(&cfg)?;
    emit_report(&report, &cfg)
}

fn cmd_check(e: &ExperimentOpts) -> Result<u8> {
    let cfg = e.opts.experiment_config(e.experiment.parse()?)?;
    let report = run(&cfg)?;
    if cfg.output.is_some() {
        emit(&report.render(cfg.format)?, cfg.output.as_ref())?;
    }
    for v in &report.verdicts {
        println!("{}: {} ({})", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
    }
    Ok(if report.passed() { 0 } else { VERDICT_FAILURE })
}

fn cmd_report(e: &ExperimentOpts) -> Result<u8> {
    let cfg = e.opts.experiment_config(e.experiment.parse()?)?;
    let report = run(&cfg)?;
    emit_report(&report, &cfg)
}

pub fn execute(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Sample(o) => cmd_sample(o),
        Command::Count(o) => cmd_count(o),
        Command::Pmf(o) => cmd_pmf(o),
        Command::Compare(o) => cmd_compare(o),
        Command::Check(e) => cmd_check(e),
        Command::Report(e) => cmd_report(e),
    }
}

/// Parses `args` and runs the command, returning the process exit status.
/// Argument errors map to 1 so that 2 stays reserved for capacity errors.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
