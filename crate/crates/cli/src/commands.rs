use std::fmt;
use std::io::Write;
use std::path::Path;

use credal::io::{
    euclidean_distances, load_bundled, load_csv, load_dissimilarity, pca_project, Dataset, DatasetSchema, FeatureKind,
    LabelColumn,
};
use credal::{
    credal_ri, derive, nonspecificity, nonspecificity_bits, read_json, summarize, to_json, CredalPartition,
    DissimilarityMatrix, Error, FocalKind, FocalSpec, MecmddParams, MultiViewDissimilarity, RiType, SolverParams,
    WeightVariant,
};

use crate::args::{Algo, Command, Focal, InputArgs, PlotArgs, RiKind, RunArgs, Variant};

/// A failed command: what it was doing and whether the caller is to blame.
#[derive(Debug)]
pub struct Failure {
    stage: &'static str,
    message: String,
    usage: bool,
}

impl Failure {
    fn usage(stage: &'static str, message: impl fmt::Display) -> Self {
        Self { stage, message: message.to_string(), usage: true }
    }

    fn runtime(stage: &'static str, message: impl fmt::Display) -> Self {
        Self { stage, message: message.to_string(), usage: false }
    }

    /// Input errors are usage errors whatever their kind.
    fn input(stage: &'static str) -> impl FnOnce(Error) -> Self {
        move |e| Self::usage(stage, e)
    }

    /// Solver errors are usage errors only when the inputs were invalid.
    fn solver(e: Error) -> Self {
        let usage = e.is_usage();
        Self { stage: "solve", message: e.to_string(), usage }
    }

    pub fn exit_code(&self) -> u8 {
        if self.usage {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.message)
    }
}

type Outcome = Result<(), Failure>;

pub fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Run(args) => run(&args),
        Command::Summary { partition } => {
            let p = read_partition(&partition)?;
            emit(None, summarize(&p).to_string().as_bytes())
        }
        Command::Metrics { partition } => {
            let p = read_partition(&partition)?;
            emit(None, metrics_report(&p).as_bytes())
        }
        Command::Compare { a, b, kind } => {
            let (pa, pb) = (read_partition(&a)?, read_partition(&b)?);
            let kind = match kind {
                RiKind::Belief => RiType::Belief,
                RiKind::Plausibility => RiType::Plausibility,
            };
            let ri = credal_ri(&pa, &pb, kind).map_err(Failure::input("compare"))?;
            emit(None, format!("{ri:.6}\n").as_bytes())
        }
        Command::Plotdata(args) => plotdata(&args),
    }
}

fn read_partition(path: &Path) -> Result<CredalPartition, Failure> {
    read_json(path).map_err(Failure::input("read partition"))
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure::runtime("write", format!("{}: {e}", p.display()))),
        None => std::io::stdout().lock().write_all(bytes).map_err(|e| Failure::runtime("write", e)),
    }
}

/// Plain `key = value` lines with full-precision numbers.
pub fn metrics_report(p: &CredalPartition) -> String {
    let d = derive(p);
    format!(
        "n = {}\nc = {}\nmethod = {}\ncriterion = {}\nnonspecificity = {}\nnonspecificity_bits = {}\noutliers = {}\n",
        p.n(),
        p.c(),
        p.method(),
        p.criterion(),
        nonspecificity(p),
        nonspecificity_bits(p),
        d.outliers.len()
    )
}

fn schema(input: &InputArgs, kind: FeatureKind) -> Result<DatasetSchema, Failure> {
    if !input.delimiter.is_ascii() {
        return Err(Failure::usage("arguments", "the delimiter must be a single ASCII character"));
    }
    let label = match input.label_column.as_str() {
        "auto" if kind == FeatureKind::Categorical => LabelColumn::None,
        "auto" => LabelColumn::Auto,
        "none" => LabelColumn::None,
        name => LabelColumn::Named(name.to_string()),
    };
    Ok(DatasetSchema { has_header: !input.no_header, delimiter: input.delimiter as u8, label, kind })
}

/// Every attribute table named by `--input` or `--dataset`.
fn tables(input: &InputArgs, kind: FeatureKind) -> Result<Vec<Dataset>, Failure> {
    if let Some(name) = &input.dataset {
        return Ok(vec![load_bundled(name).map_err(Failure::input("load"))?]);
    }
    if input.input.is_empty() {
        return Err(Failure::usage("arguments", "one of --input or --dataset is required"));
    }
    let schema = schema(input, kind)?;
    input.input.iter().map(|p| load_csv(p, &schema).map_err(Failure::input("load"))).collect()
}

fn single<T>(mut items: Vec<T>, algo: &str) -> Result<T, Failure> {
    if items.len() != 1 {
        return Err(Failure::usage("arguments", format!("{algo} takes exactly one input")));
    }
    Ok(items.pop().expect("one item"))
}

/// Dissimilarity views: matrices read directly, or squared Euclidean
/// distances of attribute tables.
fn views(args: &RunArgs) -> Result<Vec<DissimilarityMatrix>, Failure> {
    if args.distance {
        if args.input.dataset.is_some() {
            return Err(Failure::usage("arguments", "--distance needs matrix files given with --input"));
        }
        if args.input.input.is_empty() {
            return Err(Failure::usage("arguments", "--input is required"));
        }
        if !args.input.delimiter.is_ascii() {
            return Err(Failure::usage("arguments", "the delimiter must be a single ASCII character"));
        }
        return args
            .input
            .input
            .iter()
            .map(|p| load_dissimilarity(p, args.input.delimiter as u8).map_err(Failure::input("load")))
            .collect();
    }
    tables(&args.input, FeatureKind::Numeric)?
        .iter()
        .map(|t| {
            let x = t.attributes().map_err(Failure::input("load"))?;
            Ok(euclidean_distances(x, true))
        })
        .collect()
}

fn focal_spec(args: &RunArgs) -> Result<FocalSpec, Failure> {
    let kind = match args.focal {
        Focal::Full => FocalKind::Full,
        Focal::Simple => FocalKind::Simple,
        Focal::Pairs => FocalKind::Pairs,
    };
    let pairs =
        match &args.pairs {
            None => None,
            Some(text) => {
                let parse = |item: &str| -> Option<(usize, usize)> {
                    let (a, b) = item.trim().split_once(['-', ':'])?;
                    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
                };
                let parsed: Option<Vec<_>> = text.split(',').map(parse).collect();
                Some(parsed.ok_or_else(|| {
                    Failure::usage("arguments", format!("cannot read pairs `{text}` (expected 1-2,2-3)"))
                })?)
            }
        };
    if pairs.is_some() && kind != FocalKind::Pairs {
        return Err(Failure::usage("arguments", "--pairs requires --focal pairs"));
    }
    Ok(FocalSpec { kind, pairs, include_omega: !args.no_omega })
}

fn run(args: &RunArgs) -> Outcome {
    let params = SolverParams {
        alpha: args.alpha,
        beta: args.beta,
        delta: args.delta,
        gamma: args.gamma,
        ntrials: args.ntrials,
        maxit: args.maxit,
        epsi: args.epsi,
        seed: args.seed,
        focal: focal_spec(args)?,
        init: None,
    };
    let c = args.clusters;
    let name = format!("{:?}", args.algo).to_lowercase();
    if args.distance && matches!(args.algo, Algo::Ecm | Algo::Ccm | Algo::Catecm) {
        return Err(Failure::usage("arguments", format!("{name} needs attribute data, not --distance")));
    }
    let partition = match args.algo {
        Algo::Ecm | Algo::Ccm => {
            let table = single(tables(&args.input, FeatureKind::Numeric)?, &name)?;
            let x = table.attributes().map_err(Failure::input("load"))?;
            if args.algo == Algo::Ecm {
                credal::ecm_fit(x, c, &params)
            } else {
                credal::ccm_fit(x, c, &params)
            }
        }
        Algo::Catecm => {
            if args.input.dataset.is_some() {
                return Err(Failure::usage(
                    "arguments",
                    "the bundled datasets are numeric; catecm needs categorical data",
                ));
            }
            let table = single(tables(&args.input, FeatureKind::Categorical)?, &name)?;
            credal::catecm_fit(table.categorical().map_err(Failure::input("load"))?, c, &params)
        }
        Algo::Recm => credal::recm_fit(&single(views(args)?, &name)?, c, &params),
        Algo::Ecmdd => credal::ecmdd_fit(&single(views(args)?, &name)?, c, &params),
        Algo::Mecmdd => {
            let mut mv = MultiViewDissimilarity::new(views(args)?).map_err(Failure::input("load"))?;
            if let Some(d) = &args.view_deltas {
                mv = mv.with_deltas(d.clone()).map_err(Failure::input("arguments"))?;
            }
            let variant = match args.variant {
                Variant::Rwg => WeightVariant::Rwg,
                Variant::Rwl => WeightVariant::Rwl,
            };
            credal::mecmdd_fit(&mv, c, &params, &MecmddParams { s: args.s, variant })
        }
    }
    .map_err(Failure::solver)?;
    let json = to_json(&partition).map_err(|e| Failure::runtime("serialize", e))?;
    emit(args.output.as_deref(), json.as_bytes())
}

fn plotdata(args: &PlotArgs) -> Outcome {
    let p = read_partition(&args.partition)?;
    let table = single(tables(&args.input, FeatureKind::Numeric)?, "plotdata")?;
    let x = table.attributes().map_err(Failure::input("load"))?;
    if x.n() != p.n() {
        return Err(Failure::usage(
            "plotdata",
            format!("the data has {} objects but the partition has {}", x.n(), p.n()),
        ));
    }
    let dims = x.p().min(2);
    let proj = pca_project(x, dims, args.normalize).map_err(Failure::input("plotdata"))?;
    let derived = derive(&p);
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Failure::runtime("write", e);
    w.write_record(["pc1", "pc2", "hard_label", "argmax_focal", "max_mass"]).map_err(fail)?;
    for i in 0..p.n() {
        let j = derived.argmax_focal[i];
        let pc2 = if dims > 1 { proj.scores[[i, 1]] } else { 0.0 };
        w.write_record([
            proj.scores[[i, 0]].to_string(),
            pc2.to_string(),
            (derived.y_pl.labels()[i] + 1).to_string(),
            p.focal().set(j).to_string(),
            p.mass()[[i, j]].to_string(),
        ])
        .map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::runtime("write", e))?;
    emit(args.output.as_deref(), &bytes)
}
