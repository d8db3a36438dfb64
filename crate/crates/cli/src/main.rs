use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tilt_forge_core::findim::{build_algebra, default_length_bound, truncate_with_arrows, FindimError};
use tilt_forge_core::homological::quadratic_dual;
use tilt_forge_core::pipeline::{self, Assumption, PipelineError, PipelineInput, PresentationOut, RouteChoice};
use tilt_forge_core::presentation::{export_dot, parse, serialize, GradedPresentation};
use tilt_forge_core::skewgroup::{fold_presentation, folded_quiver, mckay_quiver, CyclicGroup, Grading};

#[derive(Parser)]
#[command(name = "tilt-forge", version, about = "Presentations of tilting algebras for graded singularity categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Source {
    /// Order of the cyclic group.
    #[arg(long)]
    r: Option<usize>,
    /// Weights a1,..,ad of the generator.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Vec<i64>,
    /// Grading file with `default = d` and `arrow-id = d` lines.
    #[arg(long)]
    grading: Option<PathBuf>,
    /// Inline degree override `arrow-id=d`, repeatable.
    #[arg(long = "deg")]
    deg: Vec<String>,
    /// Presentation in the text format, instead of group data.
    #[arg(long)]
    presentation: Option<PathBuf>,
    /// Gorenstein parameter, required with --presentation.
    #[arg(long)]
    ell: Option<u32>,
}

#[derive(Args, Clone)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Clone)]
struct Hypotheses {
    /// Vertices of the idempotent e (default 0).
    #[arg(long, value_delimiter = ',')]
    e: Vec<String>,
    /// Hypotheses to take for granted: regular, gorenstein, finite-quotient.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    assume: Vec<String>,
    #[arg(long)]
    length_bound: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Mckay,
    Nabla,
    Dual,
}

#[derive(Subcommand)]
enum Command {
    /// The graded McKay quiver with commutativity relations.
    Mckay {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// The Beilinson algebra as an ell-folded quiver.
    Nabla {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Hypothesis verdicts for both routes.
    Check {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        hyp: Hypotheses,
        #[command(flatten)]
        output: Output,
    },
    /// Presentation of the tilting algebra.
    Tilt {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        hyp: Hypotheses,
        #[arg(long, default_value = "auto")]
        route: String,
        #[command(flatten)]
        output: Output,
    },
    /// Quadratic dual of the Beilinson algebra, or of a presentation file.
    Dual {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Idempotent truncation of the Beilinson algebra, or of a presentation
    /// file, to the kept vertices.
    Truncate {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<String>,
        #[arg(long)]
        length_bound: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Writes BASE.dot and BASE.json.
    Export {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Stage::Mckay)]
        stage: Stage,
        /// Output path without extension.
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Input(String),
    Inconclusive(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Inconclusive(_) => 3,
            Self::Input(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(m) => write!(f, "input error: {m}"),
            Self::Inconclusive(m) => write!(f, "inconclusive: {m}"),
        }
    }
}

fn input<E: fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

impl From<FindimError> for Failure {
    fn from(e: FindimError) -> Self {
        match e {
            FindimError::BoundExceeded { .. } => Failure::Inconclusive(e.to_string()),
            other => input(other),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Findim(f) => f.into(),
            other => input(other),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

enum Loaded {
    Group {
        group: CyclicGroup,
        grading: Option<Grading>,
        pres: GradedPresentation,
    },
    File {
        pres: GradedPresentation,
        ell: Option<u32>,
    },
}

impl Loaded {
    fn presentation(&self) -> &GradedPresentation {
        match self {
            Self::Group { pres, .. } | Self::File { pres, .. } => pres,
        }
    }

    fn nabla(&self) -> Result<GradedPresentation, Failure> {
        match self {
            Self::Group { group, pres, .. } => Ok(folded_quiver(group, pres).map_err(input)?.0),
            Self::File { pres, ell: Some(ell) } => fold_presentation(pres, *ell).map_err(input),
            Self::File { ell: None, .. } => Err(Failure::Input("--presentation needs --ell here".into())),
        }
    }

    /// The algebra `dual` and `truncate` act on.
    fn target(&self) -> Result<GradedPresentation, Failure> {
        match self {
            Self::Group { .. } => self.nabla(),
            Self::File { pres, .. } => Ok(pres.clone()),
        }
    }
}

fn load(source: &Source) -> Result<Loaded, Failure> {
    match (&source.presentation, source.r) {
        (Some(_), Some(_)) => Err(Failure::Input("give either --presentation or --r/--weights".into())),
        (Some(path), None) => {
            let pres = parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(Loaded::File { pres, ell: source.ell })
        }
        (None, Some(r)) => {
            let group = CyclicGroup::new(r, &source.weights).map_err(input)?;
            let base = mckay_quiver(&group);
            let mut grading = match &source.grading {
                Some(path) => Some(Grading::parse(&read(path)?).map_err(input)?),
                None => None,
            };
            if !source.deg.is_empty() {
                let g = grading.get_or_insert_with(Grading::default);
                for d in &source.deg {
                    g.set_inline(d).map_err(input)?;
                }
            }
            let pres = match &grading {
                Some(g) => g.apply(&base).map_err(input)?,
                None => base,
            };
            Ok(Loaded::Group { group, grading, pres })
        }
        (None, None) => Err(Failure::Input("missing input: --r with --weights, or --presentation".into())),
    }
}

fn pipeline_input(loaded: Loaded, hyp: &Hypotheses) -> Result<PipelineInput, Failure> {
    let mut inp = match loaded {
        Loaded::Group { group, grading, pres } => PipelineInput::mckay(group, grading, pres),
        Loaded::File { pres, ell } => PipelineInput {
            presentation: pres,
            group: None,
            grading: None,
            ell,
            e: vec![0],
            assumptions: BTreeSet::new(),
            length_bound: None,
        },
    };
    if !hyp.e.is_empty() {
        inp.e = PipelineInput::vertices_by_name(&inp.presentation, &hyp.e)?;
    }
    for a in &hyp.assume {
        inp.assumptions.insert(a.parse::<Assumption>()?);
    }
    inp.length_bound = hyp.length_bound;
    Ok(inp)
}

fn emit(output: &Output, content: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, content).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn render(pres: &GradedPresentation, described: Option<PresentationOut>, format: Format) -> String {
    match format {
        Format::Text => serialize(pres),
        Format::Json => described.unwrap_or_else(|| PresentationOut::describe(pres, None, &[])).to_json(),
        Format::Dot => export_dot(pres),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Mckay { source, output } => {
            let loaded = load(&source)?;
            if !matches!(loaded, Loaded::Group { .. }) {
                return Err(Failure::Input("mckay needs --r and --weights".into()));
            }
            emit(&output, &render(loaded.presentation(), None, output.format))?;
        }
        Command::Nabla { source, output } => {
            let nabla = load(&source)?.nabla()?;
            emit(&output, &render(&nabla, None, output.format))?;
        }
        Command::Dual { source, output } => {
            let dual = quadratic_dual(&load(&source)?.target()?).map_err(input)?;
            emit(&output, &render(&dual, None, output.format))?;
        }
        Command::Truncate {
            source,
            keep,
            length_bound,
            output,
        } => {
            let target = load(&source)?.target()?;
            let kept = PipelineInput::vertices_by_name(&target, &keep)?;
            let tab = build_algebra(&target, length_bound.unwrap_or_else(|| default_length_bound(&target)))?;
            let (pres, info) = truncate_with_arrows(&tab, &kept)?;
            let described = PresentationOut::describe(&pres, Some(tab.corner_dimension(&kept)), &info);
            emit(&output, &render(&pres, Some(described), output.format))?;
        }
        Command::Export { source, stage, out } => {
            let loaded = load(&source)?;
            let pres = match stage {
                Stage::Mckay => loaded.presentation().clone(),
                Stage::Nabla => loaded.nabla()?,
                Stage::Dual => quadratic_dual(&loaded.nabla()?).map_err(input)?,
            };
            let with_ext = |ext: &str| {
                let mut p = out.clone().into_os_string();
                p.push(ext);
                PathBuf::from(p)
            };
            for (ext, format) in [(".dot", Format::Dot), (".json", Format::Json)] {
                let output = Output {
                    out: Some(with_ext(ext)),
                    format,
                };
                emit(&output, &render(&pres, None, format))?;
            }
        }
        Command::Check { source, hyp, output } => {
            let report = pipeline::check(&pipeline_input(load(&source)?, &hyp)?)?;
            let content = match output.format {
                Format::Text => pipeline::render_text(&report),
                Format::Json => report.to_json(),
                Format::Dot => return Err(Failure::Input("check has no dot output".into())),
            };
            emit(&output, &content)?;
            return Ok(report.exit_code() as u8);
        }
        Command::Tilt {
            source,
            hyp,
            route,
            output,
        } => {
            let route: RouteChoice = route.parse()?;
            let report = pipeline::tilt(&pipeline_input(load(&source)?, &hyp)?, route)?;
            let content = match output.format {
                Format::Text => pipeline::render_text(&report),
                Format::Json => report.to_json(),
                Format::Dot => match &report.presentation {
                    Some(p) => export_dot(&p.graded),
                    None => export_dot(&GradedPresentation::empty()),
                },
            };
            emit(&output, &content)?;
            if let Some(f) = report.route.failures.first() {
                eprintln!("hypothesis failure: {f}");
            }
            return Ok(report.exit_code() as u8);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
