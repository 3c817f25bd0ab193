//! Experiment runner: sequences of spaces through net, nerve and homology.
//!
//! An experiment is one TOML file. Every `(scale, seed)` cell is independent,
//! so sweeps run in parallel and are merged in `(scale, seed)` order; the
//! CSV output is a pure function of the file and the seed offset.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::betti_profile;
use crate::localstats::{local_profile, profile_distance, LocalProfile, Sampling};
use crate::mmspace::{make_cyclic_cover, make_flat_torus, make_graph_space, LabeledGraph, MetricMeasureSpace, SampleMode};
use crate::nerve::{build_nerve_with, degree_stats, Nerve, NerveOptions};
use crate::netgen::{assign_radii, build_almost_net, complete_to_net, coverage_deficit, AlmostNet, NetParams, WeightedNet};

/// Environment variable added to every seed.
pub const SEED_OFFSET_VAR: &str = "BSNERVE_SEED_OFFSET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    TorusTower,
    CyclicCoverTower,
    CustomFile,
}

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::TorusTower => "torus_tower",
            Family::CyclicCoverTower => "cyclic_cover_tower",
            Family::CustomFile => "custom_file",
        }
    }
}

/// Tori with sides `base_sides * n` for each `n` in `scales`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusFamily {
    pub base_sides: Vec<f64>,
    pub scales: Vec<u64>,
    /// Sample points per unit volume.
    pub density: f64,
    #[serde(default = "default_mode")]
    pub sample_mode: SampleMode,
}

fn default_mode() -> SampleMode {
    SampleMode::Grid
}

/// Cyclic covers of a labeled base graph, one per degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFamily {
    /// Bouquet of loops with these labels; ignored when `base_edges` is set.
    #[serde(default)]
    pub labels: Vec<i64>,
    #[serde(default)]
    pub base_vertices: usize,
    /// `[tail, head, label]` triples.
    #[serde(default)]
    pub base_edges: Vec<[i64; 3]>,
    pub degrees: Vec<i64>,
    /// Feed the cover complex straight to homology, skipping net and nerve.
    #[serde(default)]
    pub bypass_net: bool,
    #[serde(default = "one")]
    pub edge_length: f64,
}

fn one() -> f64 {
    1.0
}

impl CoverFamily {
    pub fn base(&self) -> Result<LabeledGraph> {
        if self.base_edges.is_empty() {
            return Ok(LabeledGraph::bouquet(&self.labels));
        }
        let mut edges = Vec::with_capacity(self.base_edges.len());
        for &[u, v, l] in &self.base_edges {
            if u < 0 || v < 0 {
                return Err(Error::Config(format!("negative vertex in base edge [{u}, {v}, {l}]")));
            }
            edges.push((u as usize, v as usize, l));
        }
        LabeledGraph::new(self.base_vertices, edges)
    }
}

/// Spaces read from `mmspace v1` files; scale `i` is the `i`-th path (from 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomFamily {
    pub paths: Vec<PathBuf>,
}

/// Net parameters from the thick-part pattern in units of `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThickPreset {
    pub delta: f64,
    pub b: f64,
    pub levels: usize,
    pub intensity: f64,
}

/// Take the net in `shrink(thick_part(epsilon), xi)`, balls in the full space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThickOptions {
    pub epsilon: f64,
    pub xi: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NerveConfig {
    #[serde(default)]
    pub edge_shortcut: bool,
    /// Defaults to one above the largest homology degree.
    pub k_max: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Fill the `wall_ms` column. Timings differ between runs.
    #[serde(default)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub radius: usize,
    /// Uniform sample size; exhaustive when absent.
    pub sample_size: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsConfig {
    /// Radius of the two far-apart boxes whose net counts are correlated.
    pub box_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    pub seeds: Vec<u64>,
    #[serde(default = "default_degrees")]
    pub homology_degrees: Vec<usize>,
    pub torus: Option<TorusFamily>,
    pub cover: Option<CoverFamily>,
    pub custom: Option<CustomFamily>,
    pub net: Option<NetParams>,
    pub preset: Option<ThickPreset>,
    pub thick: Option<ThickOptions>,
    #[serde(default)]
    pub nerve: NerveConfig,
    #[serde(default)]
    pub output: OutputConfig,
    pub profile: Option<ProfileConfig>,
    pub stats: Option<StatsConfig>,
    /// Added to every seed; set from the environment by [`ExperimentConfig::load`].
    #[serde(skip)]
    pub seed_offset: u64,
    /// Directory that relative custom paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_degrees() -> Vec<usize> {
    vec![0, 1, 2]
}

/// What a scale of the family turns into.
#[derive(Debug, Clone)]
pub enum Substrate {
    Space(Arc<MetricMeasureSpace>),
    Complex(SimplicialComplex),
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads and validates a config file, applying `BSNERVE_SEED_OFFSET`.
    pub fn load(path: &Path) -> Result<Self> {
        let mut config = Self::from_toml(&std::fs::read_to_string(path)?)?;
        config.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        config.seed_offset = seed_offset_from_env()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.seeds.is_empty() {
            return bad("seeds must not be empty");
        }
        let mut s = self.seeds.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return bad("seeds must be distinct");
        }
        if self.homology_degrees.is_empty() {
            return bad("homology_degrees must not be empty");
        }
        if self.scales().is_empty() {
            return bad("the family needs a nonempty scale list");
        }
        match self.family {
            Family::TorusTower if self.torus.is_none() => return bad("torus_tower needs a [torus] section"),
            Family::CyclicCoverTower if self.cover.is_none() => return bad("cyclic_cover_tower needs a [cover] section"),
            Family::CustomFile if self.custom.is_none() => return bad("custom_file needs a [custom] section"),
            _ => {}
        }
        if self.net.is_some() && self.preset.is_some() {
            return bad("give either [net] or [preset], not both");
        }
        if !self.bypasses_net() {
            self.net_params()?.validate()?;
        }
        if let Some(k) = self.nerve.k_max {
            if k <= self.max_degree() {
                return bad("nerve.k_max must exceed every homology degree");
            }
        }
        Ok(())
    }

    fn max_degree(&self) -> usize {
        self.homology_degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn k_max(&self) -> usize {
        self.nerve.k_max.unwrap_or(self.max_degree() + 1)
    }

    pub fn bypasses_net(&self) -> bool {
        self.family == Family::CyclicCoverTower && self.cover.as_ref().is_some_and(|c| c.bypass_net)
    }

    pub fn net_params(&self) -> Result<NetParams> {
        match (&self.net, &self.preset) {
            (Some(p), _) => Ok(*p),
            (None, Some(t)) => Ok(NetParams::thick_preset(t.delta, t.b, t.levels, t.intensity)),
            (None, None) => Err(Error::Config("missing [net] or [preset] section".into())),
        }
    }

    pub fn scales(&self) -> Vec<u64> {
        match self.family {
            Family::TorusTower => self.torus.as_ref().map(|t| t.scales.clone()).unwrap_or_default(),
            Family::CyclicCoverTower => {
                self.cover.as_ref().map(|c| c.degrees.iter().map(|&n| n.max(0) as u64).collect()).unwrap_or_default()
            }
            Family::CustomFile => self.custom.as_ref().map(|c| (1..=c.paths.len() as u64).collect()).unwrap_or_default(),
        }
    }

    pub fn effective_seed(&self, seed: u64) -> u64 {
        seed.wrapping_add(self.seed_offset)
    }

    /// SHA-256 of the canonical TOML rendering plus the seed offset.
    pub fn digest(&self) -> String {
        let text = toml::to_string(self).unwrap_or_default();
        let mut h = Sha256::new();
        h.update(text.as_bytes());
        h.update(format!("\nseed_offset={}\n", self.seed_offset).as_bytes());
        h.finalize().iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// The substrate at `scale`; `seed` only matters for Poisson-sampled tori.
    pub fn substrate(&self, scale: u64, seed: u64) -> Result<Substrate> {
        match self.family {
            Family::TorusTower => {
                let t = self.torus.as_ref().ok_or_else(|| Error::Config("missing [torus]".into()))?;
                let sides: Vec<f64> = t.base_sides.iter().map(|s| s * scale as f64).collect();
                Ok(Substrate::Space(Arc::new(make_flat_torus(&sides, t.sample_mode, t.density, seed)?)))
            }
            Family::CyclicCoverTower => {
                let c = self.cover.as_ref().ok_or_else(|| Error::Config("missing [cover]".into()))?;
                let complex = make_cyclic_cover(&c.base()?, scale as i64)?;
                if c.bypass_net {
                    Ok(Substrate::Complex(complex))
                } else {
                    Ok(Substrate::Space(Arc::new(make_graph_space(&complex, c.edge_length)?)))
                }
            }
            Family::CustomFile => {
                let c = self.custom.as_ref().ok_or_else(|| Error::Config("missing [custom]".into()))?;
                let path = self.base_dir.join(&c.paths[scale as usize - 1]);
                Ok(Substrate::Space(Arc::new(MetricMeasureSpace::from_text(&std::fs::read_to_string(path)?)?)))
            }
        }
    }
}

fn seed_offset_from_env() -> Result<u64> {
    match std::env::var(SEED_OFFSET_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Config(format!("{SEED_OFFSET_VAR}={v:?} is not an integer"))),
        Err(_) => Ok(0),
    }
}

/// Everything the net-to-nerve pipeline produced for one space.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// The space the net lives in (a subspace in the thick variant).
    pub region: Arc<MetricMeasureSpace>,
    pub almost: AlmostNet,
    pub net: WeightedNet,
    pub nerve: Nerve,
}

impl PipelineOutput {
    /// Points added by completion.
    pub fn deficit(&self) -> usize {
        self.net.levels.iter().filter(|&&l| l == 0).count()
    }
}

/// Almost-net, completion over the whole region, radii, and the nerve with
/// balls in the region's ball space.
pub fn nerve_pipeline(
    region: Arc<MetricMeasureSpace>,
    params: &NetParams,
    seed: u64,
    k_max: usize,
    opts: NerveOptions,
) -> Result<PipelineOutput> {
    let almost = build_almost_net(&region, params, seed)?;
    let all: Vec<usize> = (0..region.len()).collect();
    let net = assign_radii(complete_to_net(&region, &almost, &all), seed)?;
    let nerve = build_nerve_with(&region, &net, k_max, opts)?;
    Ok(PipelineOutput { region, almost, net, nerve })
}

/// `shrink(thick_part(epsilon), xi)` as a subspace of `space`.
pub fn thick_region(space: &Arc<MetricMeasureSpace>, thick: &ThickOptions) -> Result<Arc<MetricMeasureSpace>> {
    let part = space.thick_part(thick.epsilon)?;
    let shrunk = space.shrink(&part, thick.xi);
    Ok(Arc::new(MetricMeasureSpace::subspace(space, &shrunk)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub family: &'static str,
    pub scale: u64,
    pub seed: u64,
    pub vol: f64,
    pub net_size: Option<usize>,
    pub deficit: Option<usize>,
    /// `b_k` for each requested degree, in config order.
    pub betti: Vec<usize>,
    pub max_degree: usize,
    pub wall_ms: Option<f64>,
    pub error: Option<String>,
}

impl ResultRow {
    fn failed(family: &'static str, scale: u64, seed: u64, error: String) -> Self {
        ResultRow {
            family,
            scale,
            seed,
            vol: f64::NAN,
            net_size: None,
            deficit: None,
            betti: Vec::new(),
            max_degree: 0,
            wall_ms: None,
            error: Some(error),
        }
    }
}

/// One `(scale, seed)` cell of the sweep.
pub fn run_cell(config: &ExperimentConfig, scale: u64, seed: u64) -> Result<ResultRow> {
    let start = Instant::now();
    let eff = config.effective_seed(seed);
    let k_max = config.k_max();
    let (complex, vol, net_size, deficit) = match config.substrate(scale, eff)? {
        Substrate::Complex(c) => {
            let vol = c.n_vertices() as f64;
            (c, vol, None, None)
        }
        Substrate::Space(space) => {
            let region = match &config.thick {
                Some(t) => thick_region(&space, t)?,
                None => space,
            };
            let vol = region.total_weight();
            let opts = NerveOptions { edge_shortcut: config.nerve.edge_shortcut };
            let out = nerve_pipeline(region, &config.net_params()?, eff, k_max, opts)?;
            let (size, deficit) = (out.net.len(), out.deficit());
            (out.nerve.complex, vol, Some(size), Some(deficit))
        }
    };
    let profile = betti_profile(&complex)?;
    let betti = config
        .homology_degrees
        .iter()
        .map(|&k| {
            profile.betti.get(k).copied().ok_or(Error::InsufficientSkeleton { k, needed: k + 1, k_max: complex.k_max() })
        })
        .collect::<Result<_>>()?;
    Ok(ResultRow {
        family: config.family.id(),
        scale,
        seed,
        vol,
        net_size,
        deficit,
        betti,
        max_degree: degree_stats(&complex).max_degree,
        wall_ms: config.output.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        error: None,
    })
}

/// All cells, ordered by scale then seed. Failed cells become error rows.
pub fn run_sequence(config: &ExperimentConfig) -> Vec<ResultRow> {
    let cells: Vec<(u64, u64)> = config.scales().into_iter().flat_map(|n| config.seeds.iter().map(move |&s| (n, s))).collect();
    let mut rows: Vec<ResultRow> = cells
        .par_iter()
        .map(|&(n, s)| {
            run_cell(config, n, s).unwrap_or_else(|e| {
                let e = Error::Cell { scale: n, seed: s, source: Box::new(e) };
                ResultRow::failed(config.family.id(), n, s, e.to_string())
            })
        })
        .collect();
    rows.sort_by_key(|r| (r.scale, r.seed));
    rows
}

fn banner(config: &ExperimentConfig) -> String {
    format!("# bs-nerve {} config-sha256={}\n", env!("CARGO_PKG_VERSION"), config.digest())
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".into(), |v| v.to_string())
}

fn num(v: f64) -> String {
    if v.is_finite() {
        v.to_string()
    } else {
        "NA".into()
    }
}

pub fn rows_to_csv(config: &ExperimentConfig, rows: &[ResultRow]) -> String {
    let mut out = banner(config);
    out.push_str("family,scale,seed,vol,net_size,deficit");
    for k in &config.homology_degrees {
        let _ = write!(out, ",b{k},b{k}_per_vol");
    }
    out.push_str(",max_degree,wall_ms,error\n");
    for r in rows {
        let _ = write!(out, "{},{},{},{},{},{}", r.family, r.scale, r.seed, num(r.vol), opt(r.net_size), opt(r.deficit));
        for i in 0..config.homology_degrees.len() {
            match r.betti.get(i) {
                Some(&b) => {
                    let _ = write!(out, ",{b},{}", num(b as f64 / r.vol));
                }
                None => out.push_str(",NA,NA"),
            }
        }
        let max_degree = if r.error.is_some() { "NA".to_string() } else { r.max_degree.to_string() };
        let _ = writeln!(out, ",{max_degree},{},{}", opt(r.wall_ms), r.error.as_deref().map(quote).unwrap_or_default());
    }
    out
}

/// Monte-Carlo statistics of the almost-net at one `(scale, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetStatsRow {
    pub scale: u64,
    pub j: usize,
    pub seeds: usize,
    pub vol: f64,
    pub mean_size: f64,
    /// Unbiased sample variance of `|S^{<=j}|`.
    pub var_size: f64,
    pub mean_deficit: f64,
    /// Pearson correlation of net counts in two far-apart balls; `None` if
    /// either count is constant.
    pub box_correlation: Option<f64>,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var)
}

pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    if va == 0.0 || vb == 0.0 {
        return None;
    }
    let cov = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (a.len() as f64 - 1.0);
    Some(cov / (va * vb).sqrt())
}

/// The two balls whose counts are correlated: around point 0 and around the
/// first point farthest from it.
pub fn far_boxes(space: &MetricMeasureSpace, radius: f64) -> (Vec<usize>, Vec<usize>) {
    let far = (0..space.len()).fold(0, |best, x| if space.dist(0, x) > space.dist(0, best) { x } else { best });
    (space.neighbors_within(0, radius), space.neighbors_within(far, radius))
}

pub fn run_net_stats(config: &ExperimentConfig) -> Result<Vec<NetStatsRow>> {
    let params = config.net_params()?;
    let box_radius = config.stats.map_or(params.r1, |s| s.box_radius);
    let mut rows = Vec::new();
    for scale in config.scales() {
        // (sizes, deficits, box A counts, box B counts) per level, per seed.
        let per_seed: Vec<(f64, Vec<[f64; 4]>)> = config
            .seeds
            .par_iter()
            .map(|&seed| {
                let eff = config.effective_seed(seed);
                let cell = |e| Error::Cell { scale, seed, source: Box::new(e) };
                let space = match config.substrate(scale, eff).map_err(cell)? {
                    Substrate::Space(s) => s,
                    Substrate::Complex(_) => return Err(Error::Config("net statistics need a metric space".into())),
                };
                let region = match &config.thick {
                    Some(t) => thick_region(&space, t).map_err(cell)?,
                    None => space,
                };
                let almost = build_almost_net(&region, &params, eff).map_err(cell)?;
                let (a, b) = far_boxes(&region, box_radius);
                let levels = (1..=params.j_levels)
                    .map(|j| {
                        let s = almost.union_upto(j);
                        let count = |bx: &[usize]| s.iter().filter(|x| bx.binary_search(x).is_ok()).count() as f64;
                        let deficit = coverage_deficit(&region, &almost.truncated(j), &params) as f64;
                        [s.len() as f64, deficit, count(&a), count(&b)]
                    })
                    .collect();
                Ok((region.total_weight(), levels))
            })
            .collect::<Result<_>>()?;
        let vol = per_seed.first().map_or(f64::NAN, |p| p.0);
        for j in 0..params.j_levels {
            let col = |i: usize| per_seed.iter().map(|p| p.1[j][i]).collect::<Vec<f64>>();
            let (mean_size, var_size) = mean_var(&col(0));
            rows.push(NetStatsRow {
                scale,
                j: j + 1,
                seeds: per_seed.len(),
                vol,
                mean_size,
                var_size,
                mean_deficit: mean_var(&col(1)).0,
                box_correlation: pearson(&col(2), &col(3)),
            });
        }
    }
    Ok(rows)
}

pub fn net_stats_to_csv(config: &ExperimentConfig, rows: &[NetStatsRow]) -> String {
    let mut out = banner(config);
    out.push_str("family,scale,j,seeds,vol,mean_size,var_size,var_size_per_vol,mean_deficit,mean_deficit_per_vol,box_correlation\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            config.family.id(),
            r.scale,
            r.j,
            r.seeds,
            num(r.vol),
            num(r.mean_size),
            num(r.var_size),
            num(r.var_size / r.vol),
            num(r.mean_deficit),
            num(r.mean_deficit / r.vol),
            opt(r.box_correlation)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileReport {
    pub profiles: Vec<(u64, LocalProfile)>,
    /// `(scale_a, scale_b, tv)` for every pair `a < b`.
    pub distances: Vec<(u64, u64, f64)>,
}

/// The complex a scale contributes to local statistics: the graph complex
/// when the net is bypassed, else the nerve for the first seed.
pub fn scale_complex(config: &ExperimentConfig, scale: u64) -> Result<SimplicialComplex> {
    let seed = config.effective_seed(config.seeds[0]);
    match config.substrate(scale, seed)? {
        Substrate::Complex(c) => Ok(c),
        Substrate::Space(space) => {
            let region = match &config.thick {
                Some(t) => thick_region(&space, t)?,
                None => space,
            };
            let opts = NerveOptions { edge_shortcut: config.nerve.edge_shortcut };
            Ok(nerve_pipeline(region, &config.net_params()?, seed, config.k_max(), opts)?.nerve.complex)
        }
    }
}

pub fn run_local_profile(config: &ExperimentConfig) -> Result<ProfileReport> {
    let pc = config.profile.ok_or_else(|| Error::Config("local profiles need a [profile] section".into()))?;
    let sampling = pc.sample_size.map_or(Sampling::Exhaustive, Sampling::Uniform);
    let profiles: Vec<(u64, LocalProfile)> = config
        .scales()
        .into_iter()
        .map(|n| {
            let seed = config.effective_seed(config.seeds[0]);
            let c = scale_complex(config, n).map_err(|e| Error::Cell { scale: n, seed: config.seeds[0], source: Box::new(e) })?;
            Ok((n, local_profile(&c, pc.radius, sampling, seed)?))
        })
        .collect::<Result<_>>()?;
    let mut distances = Vec::new();
    for (i, (a, pa)) in profiles.iter().enumerate() {
        for (b, pb) in &profiles[i + 1..] {
            distances.push((*a, *b, profile_distance(pa, pb)?));
        }
    }
    Ok(ProfileReport { profiles, distances })
}

pub fn profile_report_to_csv(config: &ExperimentConfig, report: &ProfileReport) -> String {
    let mut out = banner(config);
    out.push_str("kind,scale_a,scale_b,class_id,value\n");
    for (n, p) in &report.profiles {
        for (id, w) in &p.class_weights {
            let _ = writeln!(out, "profile,{n},,{},{w}", quote(id));
        }
    }
    for (a, b, tv) in &report.distances {
        let _ = writeln!(out, "tv,{a},{b},,{tv}");
    }
    out
}
