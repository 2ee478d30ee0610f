//! The `panther` command line.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors. TSV goes to
//! the output writer and the resolved configuration to the error writer.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{PantherError, Result};
use crate::eval::{
    common_neighbor_score, default_seed_set, random_guess_resolution, resolve_with_indexes,
    Jaccard, Panther, PantherPp, RandomGuess, TopKProvider, DEFAULT_TRIALS,
};
use crate::graph::{VertexId, WeightedGraph};
use crate::oracle::ExactPathTable;
use crate::params::PantherParams;
use crate::pp::{cross_network_top_k, top_k_pp, VectorIndex, DEFAULT_DIMENSION};
use crate::sampler::{
    generate_paths, graph_fingerprint, PathIndex, DEFAULT_C, DEFAULT_DELTA, DEFAULT_PATH_LENGTH,
};
use crate::similarity::{top_k, CoOccurrence, TopKResult};
use crate::synth::{erdos_renyi, perturbed_copy, preferential_attachment};

#[derive(Parser, Debug)]
#[command(name = "panther", version, about = "Top-k vertex similarity by random path sampling")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample random paths and save the path index.
    Sample {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long)]
        paths_file: PathBuf,
    },
    /// Top-k similar vertices by path co-occurrence.
    Topk {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        query: String,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long)]
        paths_file: Option<PathBuf>,
    },
    /// Top-k structurally similar vertices by feature-vector distance.
    #[command(name = "topk-pp")]
    TopkPp {
        #[command(flatten)]
        input: GraphInput,
        /// Search this second network instead of the query's own.
        #[arg(long)]
        graph_b: Option<PathBuf>,
        #[arg(long)]
        query: String,
        #[arg(long)]
        k: usize,
        #[arg(long = "D", default_value_t = DEFAULT_DIMENSION)]
        dimension: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long)]
        paths_file: Option<PathBuf>,
        #[arg(long)]
        vectors_file: Option<PathBuf>,
        #[arg(long)]
        vectors_file_b: Option<PathBuf>,
    },
    /// Exact pairwise path similarity by full enumeration (small graphs only).
    Oracle {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long = "T")]
        path_length: usize,
    },
    /// Accuracy protocols.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Emit synthetic edge lists.
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Measure sampling and query throughput.
    Bench {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = 1000)]
        queries: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum EvalCommand {
    /// Common-neighbor approximation score against a random baseline.
    Cn {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Algorithm::Panther)]
        algorithm: Algorithm,
        /// Seed set size (default: all vertices up to 1000, else a sample of 1000).
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long = "D", default_value_t = DEFAULT_DIMENSION)]
        dimension: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Cross-network identity resolution hit rates.
    Resolve {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        graph_b: PathBuf,
        /// Lines `labelA<TAB>labelB`.
        #[arg(long)]
        mapping: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 5, 10, 20, 50])]
        k: Vec<usize>,
        #[arg(long = "D", default_value_t = DEFAULT_DIMENSION)]
        dimension: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
}

#[derive(Subcommand, Debug)]
enum SynthCommand {
    /// G(n, p) random graph.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Preferential attachment with `m` links per new vertex.
    Pa {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A preferential-attachment graph, a perturbed relabelled copy, and the mapping.
    TwoCopies {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        out_b: PathBuf,
        #[arg(long)]
        mapping_out: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Algorithm {
    Panther,
    #[value(name = "panther-pp")]
    PantherPp,
    Jaccard,
    Random,
}

#[derive(Args, Debug)]
struct GraphInput {
    /// Edge list (`u v [w]` per line) or a binary snapshot.
    #[arg(long)]
    graph: PathBuf,
    /// Read a third column as edge weight.
    #[arg(long)]
    weighted: bool,
}

#[derive(Args, Debug, Clone)]
struct SamplingArgs {
    /// Error bound (default: sqrt(1/|E|)).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
    /// Path length in edges.
    #[arg(long = "T", default_value_t = DEFAULT_PATH_LENGTH)]
    path_length: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SamplingArgs {
    fn params(&self, dimension: usize) -> PantherParams {
        PantherParams {
            epsilon: self.epsilon,
            delta: self.delta,
            c: self.c,
            path_length: self.path_length,
            dimension,
            seed: self.seed,
        }
    }
}

enum Failure {
    Usage(String),
    Data(PantherError),
}

impl From<PantherError> for Failure {
    fn from(e: PantherError) -> Self {
        Failure::Data(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.into())
    }
}

type CliResult = std::result::Result<(), Failure>;

pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return 1;
        }
    };
    let threads = pool.current_num_threads();
    let result = pool.install(|| dispatch(cli.command, threads, out, err));
    let _ = out.flush();
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            1
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, threads: usize, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CliResult {
    match cmd {
        Command::Sample { input, sampling, paths_file } => {
            let g = load_graph(&input)?;
            let params = sampling.params(DEFAULT_DIMENSION);
            let idx = obtain_paths(&g, &params, None, err)?;
            echo_config(err, &input.graph, &g, &params, &idx, threads, &[])?;
            write_file(&paths_file, |w| idx.write_to(w))?;
            writeln!(err, "wrote {} paths to {}", idx.sample_size(), paths_file.display())?;
            Ok(())
        }
        Command::Topk { input, query, k, sampling, paths_file } => {
            positive_k(k)?;
            let g = load_graph(&input)?;
            let q = lookup(&g, &query)?;
            let params = sampling.params(DEFAULT_DIMENSION);
            let idx = obtain_paths(&g, &params, paths_file.as_deref(), err)?;
            echo_config(err, &input.graph, &g, &params, &idx, threads, &[("k", k.to_string())])?;
            let res = top_k(&idx, q, k)?;
            write_ranking(out, &g, &g, &res)
        }
        Command::TopkPp {
            input,
            graph_b,
            query,
            k,
            dimension,
            sampling,
            paths_file,
            vectors_file,
            vectors_file_b,
        } => {
            positive_k(k)?;
            if dimension == 0 {
                return Err(Failure::Usage("--D must be at least 1".into()));
            }
            let g = load_graph(&input)?;
            let q = lookup(&g, &query)?;
            let params = sampling.params(dimension);
            let extra = [("k", k.to_string()), ("D", dimension.to_string())];
            let a = obtain_vectors(&g, &params, paths_file.as_deref(), vectors_file.as_deref(), &input.graph, threads, &extra, err)?;
            match graph_b {
                None => {
                    let res = top_k_pp(&a, a.vector(q)?, k)?;
                    write_ranking(out, &g, &g, &res)
                }
                Some(path_b) => {
                    let input_b = GraphInput { graph: path_b, weighted: input.weighted };
                    let gb = load_graph(&input_b)?;
                    let b = obtain_vectors(&gb, &params, None, vectors_file_b.as_deref(), &input_b.graph, threads, &extra, err)?;
                    let res = cross_network_top_k(&a, &b, q, k)?;
                    write_ranking(out, &g, &gb, &res)
                }
            }
        }
        Command::Oracle { input, path_length } => {
            let g = load_graph(&input)?;
            if path_length == 0 {
                return Err(Failure::Usage("--T must be at least 1".into()));
            }
            writeln!(err, "config: graph={} |V|={} |E|={} T={path_length}", input.graph.display(), g.vertex_count(), g.edge_count())?;
            let table = ExactPathTable::build(&g, path_length)?;
            for u in 0..g.vertex_count() as VertexId {
                for v in u..g.vertex_count() as VertexId {
                    writeln!(out, "{}\t{}\t{:.9}", g.label(u), g.label(v), table.get(u, v))?;
                }
            }
            Ok(())
        }
        Command::Eval(EvalCommand::Cn { input, k, algorithm, seeds, trials, dimension, sampling }) => {
            let g = load_graph(&input)?;
            let params = sampling.params(dimension);
            let seed_set = match seeds {
                None => default_seed_set(g.vertex_count(), params.seed),
                Some(0) => return Err(Failure::Usage("--seeds must be at least 1".into())),
                Some(s) if s >= g.vertex_count() => (0..g.vertex_count() as VertexId).collect(),
                Some(s) => {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(params.seed);
                    let mut v: Vec<VertexId> = rand::seq::index::sample(&mut rng, g.vertex_count(), s)
                        .into_iter()
                        .map(|i| i as VertexId)
                        .collect();
                    v.sort_unstable();
                    v
                }
            };
            let extra = [
                ("k", k.to_string()),
                ("algorithm", format!("{algorithm:?}")),
                ("seeds", seed_set.len().to_string()),
                ("trials", trials.to_string()),
            ];
            let score = match algorithm {
                Algorithm::Panther | Algorithm::PantherPp => {
                    let idx = obtain_paths(&g, &params, None, err)?;
                    echo_config(err, &input.graph, &g, &params, &idx, threads, &extra)?;
                    if algorithm == Algorithm::Panther {
                        common_neighbor_score(&g, &Panther(&idx), &seed_set, k, trials, params.seed)?
                    } else {
                        let vi = VectorIndex::from_paths(&idx, dimension)?;
                        common_neighbor_score(&g, &PantherPp(&vi), &seed_set, k, trials, params.seed)?
                    }
                }
                Algorithm::Jaccard | Algorithm::Random => {
                    writeln!(err, "config: graph={} |V|={} |E|={} seed={} threads={threads}{}", input.graph.display(), g.vertex_count(), g.edge_count(), params.seed, fmt_extra(&extra))?;
                    let provider: Box<dyn TopKProvider> = if algorithm == Algorithm::Jaccard {
                        Box::new(Jaccard(&g))
                    } else {
                        Box::new(RandomGuess { vertex_count: g.vertex_count(), seed: params.seed.wrapping_add(1) })
                    };
                    common_neighbor_score(&g, provider.as_ref(), &seed_set, k, trials, params.seed)?
                }
            };
            writeln!(out, "algorithm\tk\tseeds\tf_alg\tf_random\tscore\trandom_se")?;
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}",
                score.algorithm, score.k, score.seeds, score.f_alg, score.f_random, score.score, score.random_std_error
            )?;
            Ok(())
        }
        Command::Eval(EvalCommand::Resolve { input, graph_b, mapping, k, dimension, sampling }) => {
            let ga = load_graph(&input)?;
            let input_b = GraphInput { graph: graph_b, weighted: input.weighted };
            let gb = load_graph(&input_b)?;
            let pairs = read_mapping(&mapping, &ga, &gb)?;
            if k.is_empty() || k.contains(&0) {
                return Err(Failure::Usage("--k values must be positive".into()));
            }
            let params = sampling.params(dimension);
            let extra = [("D", dimension.to_string()), ("queries", pairs.len().to_string())];
            let a = obtain_vectors(&ga, &params, None, None, &input.graph, threads, &extra, err)?;
            let b = obtain_vectors(&gb, &params, None, None, &input_b.graph, threads, &extra, err)?;
            let report = resolve_with_indexes(&a, &b, &pairs, &k)?;
            let guess = random_guess_resolution(gb.vertex_count(), &pairs, &k, params.seed)?;
            writeln!(out, "k\thit_rate\trandom_guess\tanalytic_random")?;
            for (i, &kk) in report.ks.iter().enumerate() {
                let analytic = (kk as f64 / gb.vertex_count() as f64).min(1.0);
                writeln!(out, "{kk}\t{:.6}\t{:.6}\t{:.6}", report.hit_rates[i], guess.hit_rates[i], analytic)?;
            }
            Ok(())
        }
        Command::Synth(cmd) => synth(cmd, out),
        Command::Bench { input, sampling, queries, k } => {
            positive_k(k)?;
            let g = load_graph(&input)?;
            let params = sampling.params(DEFAULT_DIMENSION);
            let r = params.sample_size_for(&g)?;
            let start = Instant::now();
            let idx = generate_paths(&g, r, params.path_length, params.seed)?;
            let sample_secs = start.elapsed().as_secs_f64();
            echo_config(err, &input.graph, &g, &params, &idx, threads, &[("k", k.to_string())])?;
            let n = g.vertex_count();
            let queries = queries.max(1);
            let mut scratch = CoOccurrence::new(n);
            let start = Instant::now();
            let mut returned = 0usize;
            for i in 0..queries {
                let v = ((i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) % n as u64) as VertexId;
                returned += crate::similarity::top_k_with(&idx, v, k, &mut scratch).entries.len();
            }
            let query_secs = start.elapsed().as_secs_f64();
            writeln!(out, "metric\tvalue")?;
            writeln!(out, "paths\t{r}")?;
            writeln!(out, "sampling_seconds\t{sample_secs:.6}")?;
            writeln!(out, "paths_per_second\t{:.1}", r as f64 / sample_secs.max(1e-12))?;
            writeln!(out, "queries\t{queries}")?;
            writeln!(out, "queries_per_second\t{:.1}", queries as f64 / query_secs.max(1e-12))?;
            writeln!(out, "mean_results_per_query\t{:.3}", returned as f64 / queries as f64)?;
            Ok(())
        }
    }
}

fn synth(cmd: SynthCommand, out: &mut (dyn Write + Send)) -> CliResult {
    match cmd {
        SynthCommand::Er { n, p, seed, out: path } => emit(&erdos_renyi(n, p, seed)?, path.as_deref(), out),
        SynthCommand::Pa { n, m, seed, out: path } => {
            emit(&preferential_attachment(n, m, seed)?, path.as_deref(), out)
        }
        SynthCommand::TwoCopies { n, m, rho, seed, out: path_a, out_b, mapping_out } => {
            let base = preferential_attachment(n, m, seed)?;
            let (copy, mapping) = perturbed_copy(&base, rho, seed.wrapping_add(1))?;
            write_file(&path_a, |w| base.write_edge_list(w))?;
            write_file(&out_b, |w| copy.write_edge_list(w))?;
            write_file(&mapping_out, |w| {
                for &(a, b) in &mapping {
                    writeln!(w, "{}\t{}", base.label(a), copy.label(b))?;
                }
                Ok(())
            })?;
            Ok(())
        }
    }
}

fn emit(g: &WeightedGraph, path: Option<&Path>, out: &mut (dyn Write + Send)) -> CliResult {
    match path {
        Some(p) => write_file(p, |w| g.write_edge_list(w))?,
        None => g.write_edge_list(out)?,
    }
    Ok(())
}

fn positive_k(k: usize) -> CliResult {
    if k == 0 {
        Err(Failure::Usage("--k must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn write_file<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let mut w = BufWriter::new(File::create(path)?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Loads a binary snapshot when the file starts with the snapshot magic, otherwise parses
/// it as an edge list.
fn load_graph(input: &GraphInput) -> Result<WeightedGraph> {
    let mut reader = BufReader::new(File::open(&input.graph)?);
    if reader.fill_buf()?.starts_with(b"PNTHGRPH") {
        return WeightedGraph::read_snapshot(reader);
    }
    WeightedGraph::load_edge_list(reader, input.weighted)
}

fn lookup(g: &WeightedGraph, label: &str) -> Result<VertexId> {
    g.id_of(label).ok_or_else(|| PantherError::UnknownLabel(label.to_owned()))
}

fn read_mapping(path: &Path, ga: &WeightedGraph, gb: &WeightedGraph) -> Result<Vec<(VertexId, VertexId)>> {
    let reader = BufReader::new(File::open(path)?);
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(PantherError::Parse {
                line: i + 1,
                message: "expected `labelA<TAB>labelB`".into(),
            });
        };
        pairs.push((lookup(ga, a.trim())?, lookup(gb, b.trim())?));
    }
    if pairs.is_empty() {
        return Err(PantherError::InvalidArgument("mapping file has no pairs".into()));
    }
    Ok(pairs)
}

fn fmt_extra(extra: &[(&str, String)]) -> String {
    extra.iter().map(|(k, v)| format!(" {k}={v}")).collect()
}

fn echo_config(
    err: &mut (dyn Write + Send),
    graph: &Path,
    g: &WeightedGraph,
    params: &PantherParams,
    idx: &PathIndex,
    threads: usize,
    extra: &[(&str, String)],
) -> Result<()> {
    let eps = match params.epsilon {
        Some(e) => format!("{e}"),
        None => format!("{} (sqrt(1/|E|))", crate::sampler::default_epsilon(g.edge_count())),
    };
    writeln!(
        err,
        "config: graph={} |V|={} |E|={} epsilon={eps} delta={} c={} T={} R={} seed={} threads={threads}{}",
        graph.display(),
        g.vertex_count(),
        g.edge_count(),
        params.delta,
        params.c,
        idx.path_length(),
        idx.sample_size(),
        idx.seed(),
        fmt_extra(extra),
    )?;
    Ok(())
}

/// Loads the path index from `paths_file` when it exists and was sampled from `g`;
/// otherwise samples it (and saves it when a file was named).
fn obtain_paths(
    g: &WeightedGraph,
    params: &PantherParams,
    paths_file: Option<&Path>,
    err: &mut (dyn Write + Send),
) -> Result<PathIndex> {
    if let Some(p) = paths_file {
        if p.exists() {
            let idx = PathIndex::read_from(BufReader::new(File::open(p)?))?;
            if !idx.matches_graph(g) {
                return Err(PantherError::Format(format!(
                    "{} was sampled from a different graph",
                    p.display()
                )));
            }
            let r = params.sample_size_for(g)?;
            if idx.sample_size() != r || idx.path_length() != params.path_length || idx.seed() != params.seed {
                writeln!(
                    err,
                    "note: using {} as stored (R={} T={} seed={}), which differs from the requested R={} T={} seed={}",
                    p.display(),
                    idx.sample_size(),
                    idx.path_length(),
                    idx.seed(),
                    r,
                    params.path_length,
                    params.seed
                )?;
            }
            return Ok(idx);
        }
    }
    let idx = params.sample(g)?;
    if let Some(p) = paths_file {
        write_file(p, |w| idx.write_to(w))?;
    }
    Ok(idx)
}

#[allow(clippy::too_many_arguments)]
fn obtain_vectors(
    g: &WeightedGraph,
    params: &PantherParams,
    paths_file: Option<&Path>,
    vectors_file: Option<&Path>,
    graph_path: &Path,
    threads: usize,
    extra: &[(&str, String)],
    err: &mut (dyn Write + Send),
) -> Result<VectorIndex> {
    if let Some(p) = vectors_file {
        if p.exists() {
            let (index, fp) = VectorIndex::read_from(BufReader::new(File::open(p)?))?;
            if fp != graph_fingerprint(g) || index.len() != g.vertex_count() {
                return Err(PantherError::Format(format!(
                    "{} was built from a different graph",
                    p.display()
                )));
            }
            if index.dimension() != params.dimension {
                return Err(PantherError::DimensionMismatch {
                    expected: params.dimension,
                    actual: index.dimension(),
                });
            }
            writeln!(err, "config: graph={} vectors={} D={}", graph_path.display(), p.display(), index.dimension())?;
            return Ok(index);
        }
    }
    let idx = obtain_paths(g, params, paths_file, err)?;
    echo_config(err, graph_path, g, params, &idx, threads, extra)?;
    let index = VectorIndex::from_paths(&idx, params.dimension)?;
    if let Some(p) = vectors_file {
        write_file(p, |w| index.write_to(w, graph_fingerprint(g)))?;
    }
    Ok(index)
}

fn write_ranking(out: &mut (dyn Write + Send), gq: &WeightedGraph, gt: &WeightedGraph, res: &TopKResult) -> CliResult {
    for (rank, e) in res.entries.iter().enumerate() {
        writeln!(out, "{}\t{}\t{}\t{:.6}", gq.label(res.query), rank + 1, gt.label(e.vertex), e.score)?;
    }
    Ok(())
}
