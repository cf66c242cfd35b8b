use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hqw::graphs::{build, load_json, GraphFamily, LabeledGraph};
use hqw::linalg::{ComplexMatrix, C64};
use hqw::matmul::Mode;
use hqw::walk::{CoinInit, CoinSpec, InitialState};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "hqw", version, about = "Hybrid quantum walk simulator")]
pub struct Cli {
    /// Worker threads for grid runs.
    #[arg(long, env = "HQW_THREADS", global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Distributions, spread and entanglement over steps or a parameter grid.
    Dynamics(DynamicsArgs),
    /// Final distributions over a one-parameter family of step times or coin states.
    Sweep(SweepArgs),
    /// Perfect state transfer of a coin state along a colored path.
    Pst(PstArgs),
    /// Entries of a product of regular adjacency matrices.
    Matmul(MatmulArgs),
    /// Triangle counts from the trace of the adjacency cube.
    Triangles(TrianglesArgs),
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output file (default: ./out/<command>-<hash>.<ext>).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct DynamicsArgs {
    /// Builder string such as `star:10`, or a graph JSON file.
    #[arg(long)]
    pub graph: String,
    /// identity, hadamard, fourier, grover, perm:..., or custom:<file.json>.
    #[arg(long)]
    pub coin: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    /// Initial state, e.g. `uniform`, `basis:0@pos:0`, `amp:[0.7071,0;0,-0.7071]`.
    #[arg(long, default_value = "uniform")]
    pub init: String,
    /// Grid `name:start:stop:points` over `t` or `w`; may be given twice.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Vec<String>,
    #[arg(long, value_enum, default_value_t = Model::Hybrid)]
    pub model: Model,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// `q_time`, `q_mix2`, `q_mix3`, `q_phase2` or `q_phase3` as `name:start:stop:points`.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: String,
    /// Defaults to `line3:<steps + 1>`.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long, default_value = "grover")]
    pub coin: String,
    #[arg(long, default_value_t = 30)]
    pub steps: usize,
    /// Step time for the coin-state sweeps (default 3pi/2).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Initial state for `q_time`; the position is used by every sweep.
    #[arg(long, default_value = "basis:0")]
    pub init: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PstArgs {
    #[arg(long, conflicts_with_all = ["plan", "segment_demo"])]
    pub graph: Option<String>,
    #[arg(long)]
    pub source: Option<usize>,
    #[arg(long)]
    pub target: Option<usize>,
    /// Comma-separated vertex ids from source to target.
    #[arg(long)]
    pub path: Option<String>,
    /// Coin amplitudes `re,im;re,im;...`, one per color.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// JSON file with `graph`, `source`, `target` and optional `path`, `alpha`.
    #[arg(long, conflicts_with = "segment_demo")]
    pub plan: Option<PathBuf>,
    /// Red/blue segment line with this many vertices.
    #[arg(long)]
    pub segment_demo: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ModeArgs {
    #[arg(long, value_enum, default_value_t = ModeKind::Exact)]
    pub mode: ModeKind,
    #[arg(long, default_value_t = 20000)]
    pub shots: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct MatmulArgs {
    /// Factor graphs `A^(1) ... A^(K)` in application order.
    #[arg(long, required = true)]
    pub graph: Vec<String>,
    /// Use the single `--graph` K times.
    #[arg(long)]
    pub power: Option<usize>,
    #[arg(long, conflicts_with = "trace")]
    pub entry: Option<String>,
    #[arg(long)]
    pub trace: bool,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct TrianglesArgs {
    #[arg(long)]
    pub graph: String,
    /// Count only triangles through this vertex.
    #[arg(long)]
    pub vertex: Option<usize>,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Hybrid,
    Continuous,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeKind {
    Exact,
    Shots,
}

/// Where a graph comes from. Builder parameters may be linear in `w`
/// (`circle2:2w,2w+1`) when a `w` grid is swept.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    Builder(String),
    File(PathBuf),
    Inline(String),
}

impl GraphSource {
    pub fn parse(s: &str) -> Self {
        if s.ends_with(".json") || Path::new(s).is_file() {
            Self::File(PathBuf::from(s))
        } else {
            Self::Builder(s.to_string())
        }
    }

    pub fn uses_w(&self) -> bool {
        match self {
            Self::Builder(s) => s.split_once(':').is_some_and(|(_, p)| p.contains('w')),
            _ => false,
        }
    }

    pub fn resolve(&self, w: Option<f64>) -> Result<LabeledGraph> {
        match self {
            Self::File(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                load_json(&text).with_context(|| format!("loading {}", p.display()))
            }
            Self::Inline(text) => Ok(load_json(text)?),
            Self::Builder(s) => {
                let spec = match (s.split_once(':'), w) {
                    (Some((name, params)), Some(w)) if self.uses_w() => {
                        let vals = params.split(',').map(|p| linear_in_w(p, w)).collect::<Result<Vec<_>>>()?;
                        format!("{name}:{}", vals.iter().map(f64::to_string).collect::<Vec<_>>().join(","))
                    }
                    _ => s.clone(),
                };
                Ok(build(&spec.parse::<GraphFamily>()?)?)
            }
        }
    }
}

/// Evaluates `a*w + b` style expressions such as `2w+1`, `-w`, `0.5*w-3`.
fn linear_in_w(expr: &str, w: f64) -> Result<f64> {
    let expr: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = expr.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'*') {
            terms.push(&expr[start..i]);
            start = i;
        }
    }
    terms.push(&expr[start..]);
    let mut total = 0.0;
    for term in terms {
        let term = term.strip_prefix('+').unwrap_or(term);
        total += match term.strip_suffix('w') {
            Some(coef) => {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = match coef {
                    "" => 1.0,
                    "-" => -1.0,
                    _ => coef.parse::<f64>().with_context(|| format!("bad coefficient in {expr:?}"))?,
                };
                c * w
            }
            None => term.parse::<f64>().with_context(|| format!("bad term {term:?} in {expr:?}"))?,
        };
    }
    Ok(total)
}

/// Inclusive linear grid with at least two points.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        ensure!(parts.len() == 4, "grid {s:?} is not name:start:stop:points");
        let num = |x: &str| x.trim().parse::<f64>().with_context(|| format!("bad number {x:?} in grid {s:?}"));
        let grid = Self {
            name: parts[0].to_string(),
            start: num(parts[1])?,
            stop: num(parts[2])?,
            points: parts[3].trim().parse().with_context(|| format!("bad point count in grid {s:?}"))?,
        };
        ensure!(grid.points >= 2, "grid {s:?} needs at least 2 points");
        ensure!(grid.start.is_finite() && grid.stop.is_finite(), "grid {s:?} has non-finite bounds");
        Ok(grid)
    }

    pub fn values(&self) -> Vec<f64> {
        let h = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|k| if k + 1 == self.points { self.stop } else { self.start + h * k as f64 }).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoinArg {
    Spec(CoinSpec),
    /// Default coin: Hadamard for two labels, Grover otherwise.
    Auto,
}

impl CoinArg {
    pub fn parse(s: Option<&str>) -> Result<Self> {
        let Some(s) = s else { return Ok(Self::Auto) };
        if let Some(path) = s.strip_prefix("custom:") {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading coin {path}"))?;
            return Ok(Self::Spec(CoinSpec::Custom(matrix_from_json(&serde_json::from_str(&text)?)?)));
        }
        Ok(Self::Spec(s.parse()?))
    }

    pub fn spec(&self, coin_dim: usize) -> CoinSpec {
        match self {
            Self::Spec(s) => s.clone(),
            Self::Auto if coin_dim == 2 => CoinSpec::Hadamard,
            Self::Auto => CoinSpec::Grover,
        }
    }
}

fn complex_from_json(v: &Value) -> Result<C64> {
    match v {
        Value::Number(x) => Ok(C64::new(x.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(p) if p.len() == 2 => match (p[0].as_f64(), p[1].as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => bail!("bad complex entry {v}"),
        },
        _ => bail!("bad complex entry {v}"),
    }
}

/// Rows of numbers or `[re, im]` pairs.
fn matrix_from_json(v: &Value) -> Result<ComplexMatrix> {
    let rows = v.as_array().context("coin matrix must be an array of rows")?;
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        let row = row.as_array().context("coin matrix rows must be arrays")?;
        ensure!(row.len() == n, "coin matrix must be square");
        for x in row {
            data.push(complex_from_json(x)?);
        }
    }
    Ok(ComplexMatrix::from_vec(n, n, data)?)
}

fn parse_alpha(s: &str) -> Result<Vec<C64>> {
    let body = s.trim().trim_start_matches('[').trim_end_matches(']');
    match format!("amp:[{body}]").parse::<CoinInit>()? {
        CoinInit::Amplitudes(a) => Ok(a),
        _ => unreachable!("amp: prefix always yields amplitudes"),
    }
}

fn parse_usize_list(s: &str, what: &str) -> Result<Vec<usize>> {
    s.split(',').map(|x| x.trim().parse::<usize>().with_context(|| format!("bad {what} {s:?}"))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynamicsConfig {
    pub graph: GraphSource,
    pub coin: CoinArg,
    pub t: f64,
    pub steps: usize,
    pub init: InitialState,
    pub grids: Vec<Grid>,
    pub model: Model,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    Time,
    Mix2,
    Mix3,
    Phase2,
    Phase3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub grid: Grid,
    pub graph: GraphSource,
    pub coin: CoinSpec,
    pub steps: usize,
    pub t: f64,
    pub init: InitialState,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PstConfig {
    Plan { graph: GraphSource, source: usize, target: usize, path: Option<Vec<usize>>, alpha: Option<Vec<C64>> },
    Segment(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatmulTarget {
    Entry(usize, usize),
    Matrix,
    Trace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatmulConfig {
    pub factors: Vec<GraphSource>,
    pub target: MatmulTarget,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrianglesConfig {
    pub graph: GraphSource,
    pub vertex: Option<usize>,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Dynamics(DynamicsConfig),
    Sweep(SweepConfig),
    Pst(PstConfig),
    Matmul(MatmulConfig),
    Triangles(TrianglesConfig),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Dynamics(_) => "dynamics",
            Self::Sweep(_) => "sweep",
            Self::Pst(_) => "pst",
            Self::Matmul(_) => "matmul",
            Self::Triangles(_) => "triangles",
        }
    }
}

/// A validated run: one command, where its artifact goes, and in what format.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn mode(args: &ModeArgs) -> Result<Mode> {
    Ok(match args.mode {
        ModeKind::Exact => Mode::Exact,
        ModeKind::Shots => {
            let seed = args.seed.context("--mode shots needs --seed")?;
            ensure!(args.shots > 0, "--shots must be positive");
            Mode::Shots { shots: args.shots, seed }
        }
    })
}

impl TryFrom<Cmd> for RunConfig {
    type Error = anyhow::Error;

    fn try_from(cmd: Cmd) -> Result<Self> {
        let (command, output, default_format) = match cmd {
            Cmd::Dynamics(a) => {
                let grids = a.sweep.iter().map(|s| Grid::parse(s)).collect::<Result<Vec<_>>>()?;
                ensure!(grids.len() <= 2, "at most two --sweep grids");
                for g in &grids {
                    ensure!(g.name == "t" || g.name == "w", "dynamics sweeps run over t or w, not {:?}", g.name);
                }
                ensure!(grids.len() < 2 || grids[0].name != grids[1].name, "the two grids must differ");
                let graph = GraphSource::parse(&a.graph);
                let has_w = grids.iter().any(|g| g.name == "w");
                ensure!(graph.uses_w() == has_w, "a graph written in w needs a w grid and vice versa");
                let has_t = grids.iter().any(|g| g.name == "t");
                ensure!(has_t || a.t.is_some(), "give --t or a t grid");
                ensure!(!(has_t && a.t.is_some()), "--t conflicts with a t grid");
                let cfg = DynamicsConfig {
                    graph,
                    coin: CoinArg::parse(a.coin.as_deref())?,
                    t: a.t.unwrap_or(0.0),
                    steps: a.steps,
                    init: a.init.parse()?,
                    grids,
                    model: a.model,
                };
                (Command::Dynamics(cfg), a.output, Format::Csv)
            }
            Cmd::Sweep(a) => {
                let grid = Grid::parse(&a.sweep)?;
                let kind = match grid.name.as_str() {
                    "q_time" => SweepKind::Time,
                    "q_mix2" => SweepKind::Mix2,
                    "q_mix3" => SweepKind::Mix3,
                    "q_phase2" => SweepKind::Phase2,
                    "q_phase3" => SweepKind::Phase3,
                    other => bail!("unknown sweep parameter {other:?}"),
                };
                let qmax = grid.start.abs().max(grid.stop.abs());
                match kind {
                    SweepKind::Mix2 => ensure!(qmax <= 1.0, "q_mix2 needs |q| <= 1"),
                    SweepKind::Mix3 => ensure!(3.0 * qmax * qmax <= 2.0, "q_mix3 needs |q| <= sqrt(2/3)"),
                    _ => {}
                }
                ensure!(kind != SweepKind::Time || a.t.is_none(), "q_time sets the step time itself");
                let graph = match a.graph {
                    Some(g) => GraphSource::parse(&g),
                    None => GraphSource::Builder(format!("line3:{}", a.steps + 1)),
                };
                ensure!(!graph.uses_w(), "sweep graphs cannot depend on w");
                let cfg = SweepConfig {
                    kind,
                    grid,
                    graph,
                    coin: match CoinArg::parse(Some(&a.coin))? {
                        CoinArg::Spec(s) => s,
                        CoinArg::Auto => unreachable!("explicit coin"),
                    },
                    steps: a.steps,
                    t: a.t.unwrap_or(1.5 * PI),
                    init: a.init.parse()?,
                };
                (Command::Sweep(cfg), a.output, Format::Csv)
            }
            Cmd::Pst(a) => {
                let cfg = if let Some(m) = a.segment_demo {
                    ensure!(m >= 2, "segment demo needs at least 2 vertices");
                    PstConfig::Segment(m)
                } else if let Some(plan) = &a.plan {
                    plan_from_file(plan)?
                } else {
                    PstConfig::Plan {
                        graph: GraphSource::parse(
                            a.graph.as_deref().context("pst needs --graph, --plan or --segment-demo")?,
                        ),
                        source: a.source.context("pst needs --source")?,
                        target: a.target.context("pst needs --target")?,
                        path: a.path.as_deref().map(|p| parse_usize_list(p, "path")).transpose()?,
                        alpha: a.alpha.as_deref().map(parse_alpha).transpose()?,
                    }
                };
                ensure!(a.output.format != Some(Format::Csv), "pst writes JSON transcripts only");
                (Command::Pst(cfg), a.output, Format::Json)
            }
            Cmd::Matmul(a) => {
                let mut factors: Vec<GraphSource> = a.graph.iter().map(|g| GraphSource::parse(g)).collect();
                if let Some(k) = a.power {
                    ensure!(factors.len() == 1, "--power takes exactly one --graph");
                    ensure!(k >= 1, "--power must be at least 1");
                    factors = vec![factors[0].clone(); k];
                }
                let target = match (&a.entry, a.trace) {
                    (Some(e), _) => match parse_usize_list(e, "entry")?[..] {
                        [i, j] => MatmulTarget::Entry(i, j),
                        _ => bail!("--entry takes i,j"),
                    },
                    (None, true) => MatmulTarget::Trace,
                    (None, false) => MatmulTarget::Matrix,
                };
                let default = if target == MatmulTarget::Matrix { Format::Csv } else { Format::Json };
                let cfg = MatmulConfig { factors, target, mode: mode(&a.mode)? };
                (Command::Matmul(cfg), a.output, default)
            }
            Cmd::Triangles(a) => {
                let cfg =
                    TrianglesConfig { graph: GraphSource::parse(&a.graph), vertex: a.vertex, mode: mode(&a.mode)? };
                ensure!(a.output.format != Some(Format::Csv), "triangles writes JSON only");
                (Command::Triangles(cfg), a.output, Format::Json)
            }
        };
        if matches!(
            command,
            Command::Matmul(MatmulConfig { target: MatmulTarget::Entry(..) | MatmulTarget::Trace, .. })
        ) {
            ensure!(output.format != Some(Format::Csv), "single values are written as JSON");
        }
        Ok(Self { command, out: output.out, format: output.format.unwrap_or(default_format) })
    }
}

fn plan_from_file(path: &Path) -> Result<PstConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let graph = match &doc["graph"] {
        Value::String(s) => GraphSource::parse(s),
        v @ Value::Object(_) => GraphSource::Inline(v.to_string()),
        _ => bail!("plan needs a graph (builder string, file, or graph object)"),
    };
    let index = |key: &str| -> Result<usize> {
        doc[key].as_u64().map(|x| x as usize).with_context(|| format!("plan needs an integer {key:?}"))
    };
    let path = match &doc["path"] {
        Value::Null => None,
        Value::Array(p) => Some(
            p.iter()
                .map(|x| x.as_u64().map(|x| x as usize).context("path entries must be vertex ids"))
                .collect::<Result<_>>()?,
        ),
        _ => bail!("plan path must be an array"),
    };
    let alpha = match &doc["alpha"] {
        Value::Null => None,
        Value::Array(a) => Some(a.iter().map(complex_from_json).collect::<Result<_>>()?),
        _ => bail!("plan alpha must be an array"),
    };
    Ok(PstConfig::Plan { graph, source: index("source")?, target: index("target")?, path, alpha })
}
