//! Command-line front end: corpus pipeline stages, phrase composition,
//! entropy and similarity queries, and two built-in demonstrations.
//!
//! Exit codes: 0 success, 1 usage errors, 2 data errors (unreadable or
//! malformed inputs, unknown words, non-reducing sentences), 3 invariant
//! violations (operators that fail symmetry, positivity, or trace checks).
//! All diagnostics go to standard error; results go to standard output or
//! to the requested output files, bit-identically for identical inputs.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use discocat_core::compose::{
    closed_adjective_noun, closed_object_relative_clause, closed_subject_relative_clause,
    closed_verb_copy_object, closed_verb_copy_subject, compose_doubled, compose_noncomm,
    compose_pure, operator_matrix, ComposeError, OperatorMergePlan, PhraseWord, SpaceAssignment,
};
use discocat_core::density::{similarity_normalized, DensityError, DensityMatrix};
use discocat_core::pregroup::{PregroupError, PregroupGrammar, PregroupType, Reduction, Side};
use discocat_core::rel::{RelError, RoyalCourt, SentenceValue};
use discocat_core::{Real, RealTensor};

use crate::cluster::ClusterError;
use crate::config::{Config, ConfigError, Mode};
use crate::corpus::{Corpus, TokenKey};
use crate::formats::{
    read_lexicon, read_matrix, read_senses, read_space, read_tensor, write_matrix, write_senses,
    write_space, write_tensor, FormatError, LexEntry, LexTag, PayloadKind, SenseFile, WordSenses,
};
use crate::repair::{to_density, RepairError};
use crate::report::{fixture_report, ReportError};
use crate::senses::{induce_senses, restrict, top_k_union, SenseError};
use crate::space::{build_space, SpaceError};
use crate::synthetic::fixture_corpus;

// ---------------------------------------------------------------- errors

/// Faults grouped by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1: the invocation itself is wrong.
    Usage(String),
    /// Exit 2: inputs are missing, malformed, or linguistically invalid.
    Data(String),
    /// Exit 3: an operator violated a mathematical invariant.
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Invariant(m) => f.write_str(m),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ClusterError> for CliError {
    fn from(e: ClusterError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SenseError> for CliError {
    fn from(e: SenseError) -> Self {
        match e {
            SenseError::Density(inner) => CliError::Invariant(inner.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<DensityError> for CliError {
    fn from(e: DensityError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl From<RepairError> for CliError {
    fn from(e: RepairError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl From<ComposeError> for CliError {
    fn from(e: ComposeError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<PregroupError> for CliError {
    fn from(e: PregroupError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<RelError> for CliError {
    fn from(e: RelError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Density(inner) => CliError::Invariant(inner.to_string()),
            ReportError::Repair(inner) => CliError::Invariant(inner.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

// ---------------------------------------------------------------- parser

#[derive(Parser)]
#[command(
    name = "discocat",
    version,
    about = "Distributional sentence composition with density-matrix word meanings"
)]
struct Cli {
    /// Flat key=value configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads for corpus stages; defaults to all cores.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a distributional space (SPACE1) from a tagged corpus.
    BuildSpace {
        corpus: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Induce senses (SENSE1) for every space target found in a corpus.
    Induce {
        space: PathBuf,
        corpus: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Turn induced senses into per-word density matrices (DMAT1).
    Densify {
        senses: PathBuf,
        #[arg(short, long, value_name = "DIR")]
        output: PathBuf,
    },
    /// Compose a sentence's meaning from a LEX1 lexicon.
    Compose {
        /// Whitespace-separated surface words, quoted as one argument.
        sentence: String,
        #[arg(long, value_name = "FILE")]
        lexicon: PathBuf,
        /// pure, density, density-frobenius, or noncommutative.
        #[arg(long, value_name = "MODE")]
        mode: Option<String>,
        /// Pregroup type the sentence must reduce to.
        #[arg(long, default_value = "s", value_name = "TYPE")]
        target: String,
        /// Print each type contraction on standard output.
        #[arg(long)]
        trace: bool,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Von Neumann entropy of a DMAT1 density matrix.
    Entropy { matrix: PathBuf },
    /// Normalized operator similarity of two DMAT1 density matrices.
    Similar { a: PathBuf, b: PathBuf },
    /// Evaluate the built-in truth-model examples.
    DemoRel,
    /// Entropy table for the built-in two-sense fixture nouns.
    ReportTable {
        /// Corpus to analyse; defaults to the built-in fixture corpus.
        #[arg(long, value_name = "FILE")]
        fixtures: Option<PathBuf>,
    },
}

// ---------------------------------------------------------------- driver

/// Parses arguments, runs, prints diagnostics, and returns the exit code.
pub fn run_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            return 1;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<(Config, PathBuf), CliError> {
    match path {
        Some(p) => {
            let config = Config::parse(&read_file(p)?)?;
            let base = p.parent().unwrap_or(Path::new(".")).to_path_buf();
            Ok((config, base))
        }
        None => Ok((Config::default(), PathBuf::from("."))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".to_string()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))?;
    }
    let (config, base) = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::BuildSpace { corpus, output } => cmd_build_space(&config, &base, &corpus, &output),
        Command::Induce { space, corpus, output } => {
            cmd_induce(&config, &space, &corpus, &output)
        }
        Command::Densify { senses, output } => cmd_densify(&config, &senses, &output),
        Command::Compose { sentence, lexicon, mode, target, trace, output } => {
            let mode = match mode {
                Some(text) => Mode::parse(&text)
                    .ok_or_else(|| CliError::Usage(format!("unknown mode `{text}`")))?,
                None => config.mode,
            };
            cmd_compose(&config, &sentence, &lexicon, mode, &target, trace, &output)
        }
        Command::Entropy { matrix } => cmd_entropy(&config, &matrix),
        Command::Similar { a, b } => cmd_similar(&config, &a, &b),
        Command::DemoRel => cmd_demo_rel(),
        Command::ReportTable { fixtures } => cmd_report_table(&config, &base, fixtures.as_deref()),
    }
}

// ---------------------------------------------------------------- stages

fn cmd_build_space(
    config: &Config,
    base: &Path,
    corpus_path: &Path,
    output: &Path,
) -> Result<(), CliError> {
    let corpus = Corpus::parse(&read_file(corpus_path)?);
    let space_config = config
        .space_config(base)
        .map_err(|e| CliError::Data(format!("cannot read stop list: {e}")))?;
    let space = build_space(&corpus, &space_config)?;
    write_file(output, &write_space(&space)?)?;
    println!("{} targets over a {}-word basis", space.target_count(), space.dim());
    Ok(())
}

fn cmd_induce(
    config: &Config,
    space_path: &Path,
    corpus_path: &Path,
    output: &Path,
) -> Result<(), CliError> {
    let space = read_space(&read_file(space_path)?)?;
    let corpus = Corpus::parse(&read_file(corpus_path)?);
    let cluster = config.cluster_config();
    let targets: Vec<&TokenKey> = space.targets().collect();
    let induced: Vec<(TokenKey, WordSenses)> = targets
        .par_iter()
        .filter_map(|key| {
            match induce_senses(&corpus, &space, key, &cluster) {
                Ok(ind) => {
                    let senses = ind
                        .probabilities
                        .iter()
                        .zip(ind.centroids)
                        .map(|(&p, c)| (p, c))
                        .collect();
                    Some(Ok(((*key).clone(), senses)))
                }
                // Words the corpus cannot attest are left out of the file.
                Err(SenseError::NoOccurrences { .. })
                | Err(SenseError::NoUsableContexts { .. }) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<Vec<_>, SenseError>>()?;
    let senses: SenseFile = induced.into_iter().collect();
    let skipped = targets.len() - senses.len();
    write_file(output, &write_senses(space.dim(), &senses)?)?;
    println!("{} words induced, {} without usable occurrences", senses.len(), skipped);
    Ok(())
}

/// File-system-safe name for a word's output files.
fn payload_file_name(key: &TokenKey) -> String {
    let lemma: String = key
        .lemma
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect();
    format!("{lemma}_{}", key.pos.letter())
}

fn cmd_densify(config: &Config, senses_path: &Path, output: &Path) -> Result<(), CliError> {
    let (_dim, senses) = read_senses(&read_file(senses_path)?)?;
    std::fs::create_dir_all(output)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", output.display())))?;
    for (key, entries) in &senses {
        let vectors: Vec<&[f64]> = entries.iter().map(|(_, v)| v.as_slice()).collect();
        let coords = top_k_union(&vectors, config.top_k);
        let ensemble = discocat_core::density::SenseEnsemble::new(
            entries
                .iter()
                .map(|(p, v)| (*p, RealTensor::vector(&restrict(v, &coords))))
                .collect(),
        )?;
        let density = discocat_core::density::from_ensemble(&ensemble)?;
        let name = payload_file_name(key);
        write_file(&output.join(format!("{name}.dmat")), &write_matrix(density.matrix())?)?;
        let coord_lines: String = coords.iter().map(|c| format!("{c}\n")).collect();
        write_file(&output.join(format!("{name}.coords")), &coord_lines)?;
    }
    println!("{} density matrices in {}", senses.len(), output.display());
    Ok(())
}

// ---------------------------------------------------------------- compose

/// A lexicon entry resolved against the sentence: parsed type plus its
/// loaded payload.
struct LoadedWord {
    surface: String,
    word_type: PregroupType,
    tag: LexTag,
    payload: Payload,
}

enum Payload {
    None,
    /// A TNSR1 tensor on single wires.
    Pure(RealTensor),
    /// A validated, trace-one operator from a DMAT1 file.
    Density(RealTensor),
}

fn load_words(
    config: &Config,
    grammar: &PregroupGrammar,
    sentence: &str,
    lexicon_path: &Path,
) -> Result<Vec<LoadedWord>, CliError> {
    let entries = read_lexicon(&read_file(lexicon_path)?)?;
    let lexicon_dir = lexicon_path.parent().unwrap_or(Path::new("."));
    let mut words = Vec::new();
    let surfaces: Vec<&str> = sentence.split_whitespace().collect();
    if surfaces.is_empty() {
        return Err(CliError::Data("the sentence is empty".to_string()));
    }
    for surface in surfaces {
        let entry: &LexEntry = entries
            .iter()
            .find(|e| e.word == surface)
            .ok_or_else(|| CliError::Data(format!("word `{surface}` is not in the lexicon")))?;
        let word_type = grammar.parse_type(&entry.type_text)?;
        let payload = match (entry.kind, &entry.path) {
            (PayloadKind::None, _) => Payload::None,
            (PayloadKind::Pure, Some(p)) => {
                Payload::Pure(read_tensor(&read_file(&lexicon_dir.join(p))?)?)
            }
            (PayloadKind::Density, Some(p)) => {
                let raw = read_matrix(&read_file(&lexicon_dir.join(p))?)?;
                // Validate eagerly: a lexicon operator must already be a
                // density matrix up to the configured tolerances.
                let density = checked_density(config, &raw)?;
                Payload::Density(density.into_matrix())
            }
            (_, None) => unreachable!("read_lexicon pairs kinds and paths"),
        };
        words.push(LoadedWord {
            surface: surface.to_string(),
            word_type,
            tag: entry.tag,
            payload,
        });
    }
    Ok(words)
}

/// Reads the per-basic dimensions off the payload shapes, with config
/// `dim_<basic>` values taking part as one more constraint source.
fn infer_spaces(
    config: &Config,
    grammar: &PregroupGrammar,
    words: &[LoadedWord],
    target: &PregroupType,
) -> Result<SpaceAssignment, CliError> {
    let mut dims: Vec<Option<usize>> = vec![None; grammar.basics().len()];
    let constrain = |dims: &mut Vec<Option<usize>>, base: usize, d: usize, from: &str| {
        match dims[base] {
            Some(prev) if prev != d => Err(CliError::Data(format!(
                "basic type `{}` is {prev}-dimensional elsewhere but {d}-dimensional in {from}",
                grammar.basic_symbol(base)
            ))),
            _ => {
                dims[base] = Some(d);
                Ok(())
            }
        }
    };
    for (basic, &d) in &config.dims {
        let base = grammar
            .basic_index(basic)
            .ok_or_else(|| CliError::Usage(format!("config names unknown basic type `{basic}`")))?;
        constrain(&mut dims, base, d, "the configuration")?;
    }
    for w in words {
        let atoms = w.word_type.atoms();
        match (&w.payload, w.tag) {
            (Payload::Pure(t), LexTag::Given) if t.rank() == atoms.len() => {
                for (k, atom) in atoms.iter().enumerate() {
                    constrain(&mut dims, atom.base, t.dim(k), &w.surface)?;
                }
            }
            (Payload::Density(m), LexTag::Given) if atoms.len() == 1 => {
                constrain(&mut dims, atoms[0].base, m.dim(0), &w.surface)?;
            }
            (Payload::Pure(v), LexTag::AdjectiveDelta) if v.rank() == 1 && !atoms.is_empty() => {
                constrain(&mut dims, atoms[0].base, v.dim(0), &w.surface)?;
            }
            (Payload::Density(m), LexTag::AdjectiveDelta) if !atoms.is_empty() => {
                constrain(&mut dims, atoms[0].base, m.dim(0), &w.surface)?;
            }
            (Payload::Pure(m), LexTag::VerbCopySubject | LexTag::VerbCopyObject)
                if m.rank() == 2 && atoms.len() == 3 =>
            {
                // Copy constructions put argument and sentence wires in
                // one space, so the matrix pins all three atoms.
                for atom in atoms {
                    constrain(&mut dims, atom.base, m.dim(0), &w.surface)?;
                }
            }
            _ => {}
        }
    }
    let mut used: Vec<bool> = vec![false; dims.len()];
    for w in words {
        for atom in w.word_type.atoms() {
            used[atom.base] = true;
        }
    }
    for atom in target.atoms() {
        used[atom.base] = true;
    }
    let resolved: Vec<usize> = dims
        .iter()
        .enumerate()
        .map(|(base, d)| match d {
            Some(d) => Ok(*d),
            // Unused basics get a harmless placeholder dimension.
            None if !used[base] => Ok(1),
            None => Err(CliError::Data(format!(
                "cannot infer the dimension of `{}`; set dim_{} in the config",
                grammar.basic_symbol(base),
                grammar.basic_symbol(base)
            ))),
        })
        .collect::<Result<_, _>>()?;
    Ok(SpaceAssignment::new(resolved)?)
}

fn pure_phrase_word(w: &LoadedWord) -> Result<PhraseWord<Real>, CliError> {
    match (&w.payload, w.tag) {
        (Payload::Pure(t), LexTag::Given) => Ok(PhraseWord::given(w.word_type.clone(), t.clone())),
        (Payload::Pure(v), LexTag::AdjectiveDelta) => {
            Ok(PhraseWord::adjective_delta(w.word_type.clone(), v.clone()))
        }
        (Payload::Pure(m), LexTag::VerbCopySubject) => {
            Ok(PhraseWord::verb_copy_subject(w.word_type.clone(), m.clone()))
        }
        (Payload::Pure(m), LexTag::VerbCopyObject) => {
            Ok(PhraseWord::verb_copy_object(w.word_type.clone(), m.clone()))
        }
        (Payload::None, LexTag::RelPron) => Ok(PhraseWord::relative_pronoun(w.word_type.clone())),
        (Payload::Density(_), _) => Err(CliError::Data(format!(
            "`{}` has a density payload; pure mode needs TNSR1 payloads",
            w.surface
        ))),
        _ => Err(CliError::Data(format!(
            "`{}`: payload kind does not fit construction `{}`",
            w.surface,
            w.tag.name()
        ))),
    }
}

fn doubled_phrase_word(
    w: &LoadedWord,
    spaces: &SpaceAssignment,
) -> Result<PhraseWord<Real>, CliError> {
    match (&w.payload, w.tag) {
        // A pure tensor in a density-mode sentence carries no mixing; its
        // doubled meaning is the two-layer product with itself.
        (Payload::Pure(t), LexTag::Given) => {
            Ok(PhraseWord::given(w.word_type.clone(), t.tensor_product(t)))
        }
        (Payload::Density(m), LexTag::Given) => {
            let shape = spaces.type_shape(&w.word_type)?;
            let volume: usize = shape.iter().product();
            if m.dim(0) != volume {
                return Err(CliError::Data(format!(
                    "`{}`: operator is {}x{} but the type space has dimension {volume}",
                    w.surface,
                    m.dim(0),
                    m.dim(1)
                )));
            }
            let mut doubled = shape.clone();
            doubled.extend_from_slice(&shape);
            let t = m.reshape(doubled).expect("volume was checked");
            Ok(PhraseWord::given(w.word_type.clone(), t))
        }
        (Payload::Density(m), LexTag::AdjectiveDelta) => {
            Ok(PhraseWord::adjective_delta(w.word_type.clone(), m.clone()))
        }
        (Payload::Pure(v), LexTag::AdjectiveDelta) if v.rank() == 1 => {
            let d = v.dim(0);
            let mut m = RealTensor::zeros(vec![d, d]);
            for i in 0..d {
                for j in 0..d {
                    m.set(&[i, j], v.get(&[i]) * v.get(&[j]));
                }
            }
            Ok(PhraseWord::adjective_delta(w.word_type.clone(), m))
        }
        (Payload::Pure(m), LexTag::VerbCopySubject) => {
            Ok(PhraseWord::verb_copy_subject(w.word_type.clone(), m.clone()))
        }
        (Payload::Pure(m), LexTag::VerbCopyObject) => {
            Ok(PhraseWord::verb_copy_object(w.word_type.clone(), m.clone()))
        }
        (Payload::Density(_), LexTag::VerbCopySubject | LexTag::VerbCopyObject) => {
            Err(CliError::Data(format!(
                "`{}`: copy verbs take pure argument matrices, not operators",
                w.surface
            )))
        }
        (Payload::None, LexTag::RelPron) => Ok(PhraseWord::relative_pronoun(w.word_type.clone())),
        _ => Err(CliError::Data(format!(
            "`{}`: payload kind does not fit construction `{}`",
            w.surface,
            w.tag.name()
        ))),
    }
}

/// The Frobenius closed forms for the handful of phrase shapes they cover;
/// `None` hands the sentence to the general diagram evaluator.
fn closed_form(words: &[LoadedWord]) -> Result<Option<RealTensor>, CliError> {
    let tags: Vec<LexTag> = words.iter().map(|w| w.tag).collect();
    let density = |w: &LoadedWord| match &w.payload {
        Payload::Density(m) => Some(m.clone()),
        _ => None,
    };
    let pure_matrix = |w: &LoadedWord| match &w.payload {
        Payload::Pure(m) if m.rank() == 2 => Some(m.clone()),
        _ => None,
    };
    let result = match tags.as_slice() {
        [LexTag::AdjectiveDelta, LexTag::Given] => {
            match (density(&words[0]), density(&words[1])) {
                (Some(a), Some(n)) => Some(closed_adjective_noun(&a, &n)?),
                _ => None,
            }
        }
        [LexTag::Given, LexTag::VerbCopySubject, LexTag::Given] => {
            match (density(&words[0]), pure_matrix(&words[1]), density(&words[2])) {
                (Some(s), Some(v), Some(o)) => Some(closed_verb_copy_subject(&v, &s, &o)?),
                _ => None,
            }
        }
        [LexTag::Given, LexTag::VerbCopyObject, LexTag::Given] => {
            match (density(&words[0]), pure_matrix(&words[1]), density(&words[2])) {
                (Some(s), Some(v), Some(o)) => Some(closed_verb_copy_object(&v, &s, &o)?),
                _ => None,
            }
        }
        [LexTag::Given, LexTag::RelPron, LexTag::VerbCopySubject, LexTag::Given] => {
            match (density(&words[0]), pure_matrix(&words[2]), density(&words[3])) {
                (Some(n), Some(v), Some(o)) => {
                    Some(closed_subject_relative_clause(&n, &v, &o)?)
                }
                _ => None,
            }
        }
        [LexTag::Given, LexTag::RelPron, LexTag::Given, LexTag::VerbCopyObject] => {
            match (density(&words[0]), density(&words[2]), pure_matrix(&words[3])) {
                (Some(n), Some(s), Some(v)) => Some(closed_object_relative_clause(&n, &v, &s)?),
                _ => None,
            }
        }
        _ => None,
    };
    Ok(result)
}

fn print_trace(grammar: &PregroupGrammar, words: &[LoadedWord], reduction: &Reduction) {
    let atoms: Vec<_> = words
        .iter()
        .flat_map(|w| w.word_type.atoms().iter().copied())
        .collect();
    for c in reduction.contractions() {
        let left = grammar.format_type(&PregroupType::from_atoms(vec![atoms[c.left]]));
        let right = grammar.format_type(&PregroupType::from_atoms(vec![atoms[c.right]]));
        let side = match c.direction {
            Side::Left => "left",
            Side::Right => "right",
        };
        println!("cup {left}@{} {right}@{} ({side})", c.left, c.right);
    }
}

fn checked_density(config: &Config, raw: &RealTensor) -> Result<DensityMatrix, CliError> {
    let d = raw.dim(0);
    let trace: f64 = (0..d).map(|i| raw.get(&[i, i])).sum();
    if (trace - 1.0).abs() > config.trace_tolerance {
        return Err(CliError::Invariant(format!(
            "operator trace {trace:.12} is not within {:.1e} of one",
            config.trace_tolerance
        )));
    }
    Ok(to_density(raw, config.psd_tolerance)?)
}

fn cmd_compose(
    config: &Config,
    sentence: &str,
    lexicon: &Path,
    mode: Mode,
    target_text: &str,
    trace: bool,
    output: &Path,
) -> Result<(), CliError> {
    let grammar = PregroupGrammar::english();
    let target = grammar.parse_type(target_text)?;
    let words = load_words(config, &grammar, sentence, lexicon)?;
    let spaces = infer_spaces(config, &grammar, &words, &target)?;

    match mode {
        Mode::Pure => {
            let phrase: Vec<PhraseWord<Real>> =
                words.iter().map(pure_phrase_word).collect::<Result<_, _>>()?;
            let composition = compose_pure(&grammar, &spaces, &phrase, &target)?;
            if trace {
                print_trace(&grammar, &words, &composition.reduction);
            }
            write_file(output, &write_tensor(&composition.tensor))
        }
        Mode::Density | Mode::DensityFrobenius => {
            // Both modes shape the words identically; the Frobenius mode
            // additionally short-circuits the phrase shapes with closed
            // forms. The results agree; the closed route skips the
            // intermediate doubled tensors.
            let types: Vec<PregroupType> = words.iter().map(|w| w.word_type.clone()).collect();
            let closed = if mode == Mode::DensityFrobenius { closed_form(&words)? } else { None };
            let (matrix, reduction) = match closed {
                Some(m) => (m, grammar.reduce(&types, &target)?),
                None => {
                    let phrase: Vec<PhraseWord<Real>> = words
                        .iter()
                        .map(|w| doubled_phrase_word(w, &spaces))
                        .collect::<Result<_, _>>()?;
                    let composition = compose_doubled(&grammar, &spaces, &phrase, &target)?;
                    (operator_matrix(&composition.tensor)?, composition.reduction)
                }
            };
            if trace {
                print_trace(&grammar, &words, &reduction);
            }
            let density = to_density(&matrix, config.psd_tolerance)?;
            write_file(output, &write_matrix(density.matrix())?)
        }
        Mode::Noncommutative => {
            grammar.reduce(
                &words.iter().map(|w| w.word_type.clone()).collect::<Vec<_>>(),
                &target,
            )?;
            let operators: Vec<RealTensor> = words
                .iter()
                .map(|w| match &w.payload {
                    Payload::Density(m) => Ok(m.clone()),
                    _ => Err(CliError::Data(format!(
                        "`{}`: noncommutative composition merges density operators only",
                        w.surface
                    ))),
                })
                .collect::<Result<_, _>>()?;
            let plan = OperatorMergePlan::chain(operators.len());
            let merged = compose_noncomm(&operators, &plan)?;
            // The merge is an operator product: generally not symmetric,
            // so it is written raw rather than repaired into a density.
            write_file(output, &write_matrix(&merged)?)
        }
    }
}

// ---------------------------------------------------------------- queries

fn cmd_entropy(config: &Config, matrix_path: &Path) -> Result<(), CliError> {
    let raw = read_matrix(&read_file(matrix_path)?)?;
    let density = checked_density(config, &raw)?;
    println!("{:.9}", density.von_neumann_entropy()?);
    Ok(())
}

fn cmd_similar(config: &Config, a: &Path, b: &Path) -> Result<(), CliError> {
    let da = checked_density(config, &read_matrix(&read_file(a)?)?)?;
    let db = checked_density(config, &read_matrix(&read_file(b)?)?)?;
    println!("{:.9}", similarity_normalized(&da, &db)?);
    Ok(())
}

fn cmd_demo_rel() -> Result<(), CliError> {
    let court = RoyalCourt::new();
    match court.queen_rules()? {
        SentenceValue::Ambiguous => println!("queen rules → AMBIGUOUS (1_S)"),
        other => {
            return Err(CliError::Invariant(format!(
                "expected `queen rules` to be ambiguous, got {other}"
            )))
        }
    }
    match court.queen_rules_england()? {
        SentenceValue::True => println!("queen rules england → TRUE (pure)"),
        other => {
            return Err(CliError::Invariant(format!(
                "expected `queen rules england` to be true, got {other}"
            )))
        }
    }
    Ok(())
}

fn cmd_report_table(
    config: &Config,
    base: &Path,
    fixtures: Option<&Path>,
) -> Result<(), CliError> {
    let text = match fixtures {
        Some(path) => read_file(path)?,
        None => fixture_corpus(),
    };
    let corpus = Corpus::parse(&text);
    let space_config = config
        .space_config(base)
        .map_err(|e| CliError::Data(format!("cannot read stop list: {e}")))?;
    let table = fixture_report(&corpus, &space_config, &config.cluster_config(), config.top_k)?;
    print!("{}", table.render());
    Ok(())
}
