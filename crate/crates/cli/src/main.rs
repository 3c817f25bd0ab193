use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use bs_nerve::harness::{self, ExperimentConfig};
use bs_nerve::homology::betti_profile;
use bs_nerve::localstats::{local_profile, Sampling};
use bs_nerve::margulis::{tube_volume_lower_bound, TubeBoundInput};
use bs_nerve::mmspace::{make_cyclic_cover, make_flat_torus, make_graph_space, LabeledGraph, SampleMode};
use bs_nerve::nerve::{build_nerve_with, NerveOptions};
use bs_nerve::netgen::{assign_radii, build_almost_net, complete_to_net, NetParams, SoftKernel, WeightedNet};
use bs_nerve::{MetricMeasureSpace, SimplicialComplex};

#[derive(Parser)]
#[command(name = "bs-nerve", version, about = "Random nets, nerves and Betti numbers on finite metric-measure spaces")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a flat torus or a cyclic-cover graph space.
    GenSpace(GenSpace),
    /// Sample an almost-net, complete it and assign radii.
    Net(NetCmd),
    /// Build the nerve of a weighted net.
    Nerve(NerveCmd),
    /// Betti numbers of a complex.
    Betti(BettiCmd),
    /// Rooted-ball profile of a complex, or TV distances across a config's scales.
    LocalProfile(ProfileCmd),
    /// Evaluate the Margulis tube volume lower bound.
    TubeBound(TubeCmd),
    /// Run an experiment file.
    Run(RunCmd),
    /// Monte-Carlo net statistics for an experiment file.
    NetStats(RunCmd),
}

#[derive(Args)]
struct GenSpace {
    #[arg(long, value_enum)]
    kind: SpaceKind,
    /// Torus side lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    sides: Vec<f64>,
    #[arg(long, default_value = "grid")]
    mode: String,
    #[arg(long, default_value_t = 16.0)]
    density: f64,
    /// Loop labels of the bouquet base graph.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    labels: Vec<i64>,
    /// Cover degree.
    #[arg(long)]
    degree: Option<i64>,
    #[arg(long, default_value_t = 1.0)]
    edge_length: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceKind {
    Torus,
    Cover,
}

#[derive(Args)]
struct NetCmd {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    r0: f64,
    #[arg(long)]
    r_soft: f64,
    #[arg(long)]
    r1: f64,
    #[arg(long)]
    r2: f64,
    #[arg(long)]
    r3: f64,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    #[arg(long, default_value_t = 1.0)]
    intensity: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NerveCmd {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    net: PathBuf,
    #[arg(long, default_value_t = 3)]
    k_max: usize,
    /// Admit edges by d(x,y) < rho(x) + rho(y) on geodesic spaces.
    #[arg(long)]
    edge_shortcut: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BettiCmd {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileCmd {
    #[arg(long, conflicts_with = "config")]
    complex: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    radius: usize,
    /// Uniform sample size; every vertex once when omitted.
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TubeCmd {
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    ell: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

#[derive(Args)]
struct RunCmd {
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_space(path: &Path) -> Result<MetricMeasureSpace> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(MetricMeasureSpace::from_text(&text)?)
}

fn read_complex(path: &Path) -> Result<SimplicialComplex> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(SimplicialComplex::from_text(&text)?)
}

fn gen_space(g: &GenSpace) -> Result<()> {
    let space = match g.kind {
        SpaceKind::Torus => {
            if g.sides.is_empty() {
                bail!("--sides is required for a torus");
            }
            let mode: SampleMode = g.mode.parse()?;
            make_flat_torus(&g.sides, mode, g.density, g.seed)?
        }
        SpaceKind::Cover => {
            let degree = g.degree.context("--degree is required for a cover")?;
            let cover = make_cyclic_cover(&LabeledGraph::bouquet(&g.labels), degree)?;
            make_graph_space(&cover, g.edge_length)?
        }
    };
    emit(g.out.as_deref(), &space.to_text())
}

fn net(n: &NetCmd) -> Result<()> {
    let space = read_space(&n.space)?;
    let params = NetParams {
        r0: n.r0,
        r_soft: n.r_soft,
        r1: n.r1,
        r2: n.r2,
        r3: n.r3,
        j_levels: n.levels,
        intensity: n.intensity,
        kernel: SoftKernel::Linear,
    };
    let almost = build_almost_net(&space, &params, n.seed)?;
    let all: Vec<usize> = (0..space.len()).collect();
    let net = assign_radii(complete_to_net(&space, &almost, &all), n.seed)?;
    emit(n.out.as_deref(), &net.to_text())
}

fn nerve(n: &NerveCmd) -> Result<()> {
    let space = read_space(&n.space)?;
    let net = WeightedNet::from_text(&fs::read_to_string(&n.net)?)?;
    let nerve = build_nerve_with(&space, &net, n.k_max, NerveOptions { edge_shortcut: n.edge_shortcut })?;
    emit(n.out.as_deref(), &nerve.complex.to_text())
}

fn betti(b: &BettiCmd) -> Result<()> {
    let complex = read_complex(&b.complex)?;
    let profile = betti_profile(&complex)?;
    let mut out = String::from("k,betti,betti_per_vertex\n");
    for (k, (b, n)) in profile.betti.iter().zip(&profile.normalized).enumerate() {
        out.push_str(&format!("{k},{b},{n}\n"));
    }
    emit(b.out.as_deref(), &out)
}

fn profile(p: &ProfileCmd) -> Result<()> {
    if let Some(path) = &p.config {
        let config = ExperimentConfig::load(path)?;
        let report = harness::run_local_profile(&config)?;
        return emit(p.out.as_deref(), &harness::profile_report_to_csv(&config, &report));
    }
    let path = p.complex.as_ref().context("give --complex or --config")?;
    let complex = read_complex(path)?;
    let sampling = p.sample_size.map_or(Sampling::Exhaustive, Sampling::Uniform);
    emit(p.out.as_deref(), &local_profile(&complex, p.radius, sampling, p.seed)?.to_csv())
}

fn tube(t: &TubeCmd) -> Result<()> {
    let input = TubeBoundInput { d: t.d, a: t.a, epsilon: t.eps, ell: t.ell, c_cover: t.c };
    emit(None, &tube_volume_lower_bound(&input)?.to_lines())
}

fn run(r: &RunCmd) -> Result<()> {
    let config = ExperimentConfig::load(&r.config)?;
    let rows = harness::run_sequence(&config);
    emit(r.out.as_deref(), &harness::rows_to_csv(&config, &rows))
}

fn net_stats(r: &RunCmd) -> Result<()> {
    let config = ExperimentConfig::load(&r.config)?;
    let rows = harness::run_net_stats(&config)?;
    emit(r.out.as_deref(), &harness::net_stats_to_csv(&config, &rows))
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let Format::Csv = cli.format;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match &cli.command {
        Command::GenSpace(g) => gen_space(g),
        Command::Net(n) => net(n),
        Command::Nerve(n) => nerve(n),
        Command::Betti(b) => betti(b),
        Command::LocalProfile(p) => profile(p),
        Command::TubeBound(t) => tube(t),
        Command::Run(r) => run(r),
        Command::NetStats(r) => net_stats(r),
    }
}
