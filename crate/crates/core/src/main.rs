use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::warn;

use citelink_core::pipeline::{
    cmd_enrich, cmd_ingest, cmd_match, cmd_pipeline, cmd_report, cmd_sample, cmd_synth, MatchSummary, PipelineConfig,
    ReportSummary, SampleSettings, SynthSpec,
};
use citelink_core::{Error, Result};

#[derive(Parser)]
#[command(name = "citelink", version, about = "Link citing records across GS, WoS and Scopus and report their overlap")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse exports into canonical record files.
    Ingest(Common),
    /// Fill DOIs, types and languages in the canonical files.
    Enrich(Common),
    /// Link records and write edges and clusters.
    Match(Common),
    /// Compute the report tables and run manifest.
    Report(Common),
    /// Draw labeling sheets of unknown-type citations.
    Sample(Common),
    /// Run ingest, enrich, match and report (and sample when configured).
    Pipeline(Common),
    /// Generate a synthetic corpus with known clusters.
    Synth {
        /// Ground-truth spec (JSON).
        #[arg(long)]
        spec: PathBuf,
        /// Directory for the generated files.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Pipeline config (JSON).
    #[arg(long, short)]
    config: PathBuf,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    high_sim_threshold: Option<f64>,
    #[arg(long)]
    low_sim_threshold: Option<f64>,
    #[arg(long)]
    min_title_len: Option<usize>,
    #[arg(long, env = "CITELINK_RESOLVER_URL")]
    resolver_url: Option<String>,
    #[arg(long, env = "CITELINK_OFFLINE", value_parser = clap::builder::BoolishValueParser::new())]
    offline: Option<bool>,
}

impl Common {
    fn config(&self) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::load(&self.config)?;
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = Some(v);
        }
        if let Some(v) = self.sample_size {
            cfg.sample.get_or_insert_with(SampleSettings::default).size = v;
        }
        if let Some(v) = self.high_sim_threshold {
            cfg.policy.high_sim_threshold = v;
        }
        if let Some(v) = self.low_sim_threshold {
            cfg.policy.low_sim_threshold = v;
        }
        if let Some(v) = self.min_title_len {
            cfg.policy.min_title_len = v;
        }
        if let Some(v) = &self.resolver_url {
            cfg.resolver.base_url = Some(v.clone());
        }
        if let Some(v) = self.offline {
            cfg.resolver.offline = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_match(s: &MatchSummary) {
    println!(
        "matched {} records over {} cited documents: {} DOI edges, {} fuzzy edges, {} clusters ({} flagged)",
        s.records, s.cited_docs, s.doi_edges, s.fuzzy_edges, s.clusters, s.flagged_clusters
    );
}

fn print_report(s: &ReportSummary) {
    if let Some(all) = s.regions.first() {
        let c = all.counts;
        println!(
            "{} clusters: G={} W={} S={} GW={} GSc={} WS={} GWS={}",
            c.total, c.g, c.w, c.s, c.gw, c.gs, c.ws, c.gws
        );
    }
    for n in &s.notes {
        println!("note: {n}");
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(c) => {
            let s = cmd_ingest(&c.config()?)?;
            for w in &s.warnings {
                warn!("{w}");
            }
            for (src, n) in &s.sources {
                println!("{src}: {} records, {} rejects, {} duplicates", n.records, n.rejects, n.duplicates_dropped);
            }
        }
        Command::Enrich(c) => {
            let s = cmd_enrich(&c.config()?)?;
            for w in &s.warnings {
                warn!("{w}");
            }
            println!(
                "enriched {} records: DOIs {} -> {}, unknown types {} -> {}",
                s.records, s.doi_before, s.doi_after, s.unknown_type_before, s.unknown_type_after
            );
        }
        Command::Match(c) => print_match(&cmd_match(&c.config()?)?),
        Command::Report(c) => print_report(&cmd_report(&c.config()?)?),
        Command::Sample(c) => {
            let mut cfg = c.config()?;
            cfg.sample.get_or_insert_with(SampleSettings::default);
            for (group, (path, n)) in cmd_sample(&cfg)?.sheets {
                println!("{group}: {n} rows in {path}");
            }
        }
        Command::Pipeline(c) => {
            let s = cmd_pipeline(&c.config()?)?;
            print_match(&s.matching);
            print_report(&s.report);
        }
        Command::Synth { spec, out } => {
            let text = std::fs::read_to_string(&spec).map_err(|e| Error::io(&spec, e))?;
            let spec: SynthSpec =
                serde_json::from_str(&text).map_err(|e| Error::validation(format!("synth spec: {e}")))?;
            let s = cmd_synth(&spec, &out)?;
            println!("wrote {} records in {} planted clusters to {}", s.records, s.clusters, out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
