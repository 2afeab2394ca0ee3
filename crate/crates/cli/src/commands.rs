use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use mtekit::alignment::{
    compose, compose_around, compose_multiway, load_alignment, validate_alignment, AlignmentGroup,
};
use mtekit::codec::{DecodeMode, ExpansionForm};
use mtekit::corpus::{attach_libraries, corpus_stats, load_corpus, validate_corpus, AnnotatedCorpus, ParseMode};
use mtekit::lexicon::{
    build_msd_index, emit_index, load_lexicon, provenance, validate_lexicon, Lexicon, LexiconOptions, Separator,
};
use mtekit::ops::{diff, merge, records_to_text, render_report, split};
use mtekit::spec::{emit_language_section, emit_spec, load_section, spec_stats, LanguageSection};
use mtekit::{load_spec, Codec, Msd, Ordering, Report, SpecFormat, Specification};

use crate::{AlignCmd, CorpusCmd, Format, Global, LexArgs, LexCmd, MsdCmd, OrderingArg, SpecCmd, Target};

#[derive(Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    /// Findings of error severity were produced.
    pub failed: bool,
}

enum Stop {
    /// Usage or I/O problem.
    Usage(String),
    /// Input that could not be processed, reported as findings.
    Findings(Report),
}

impl From<String> for Stop {
    fn from(message: String) -> Self {
        Stop::Usage(message)
    }
}

type Res<T> = Result<T, Stop>;

fn finish(g: &Global, result: Res<Output>) -> Result<Output, String> {
    match result {
        Ok(out) => Ok(out),
        Err(Stop::Usage(message)) => Err(message),
        Err(Stop::Findings(report)) => Ok(report_output(g, &report)),
    }
}

fn render(g: &Global, report: &Report) -> String {
    if g.human {
        report.to_human()
    } else {
        report.to_tsv()
    }
}

fn report_output(g: &Global, report: &Report) -> Output {
    Output {
        stdout: render(g, report),
        failed: report.has_errors(),
        ..Default::default()
    }
}

fn data_error(kind: &str, path: impl Into<String>, detail: impl ToString) -> Stop {
    let mut report = Report::new();
    report.error(kind, path, detail.to_string());
    Stop::Findings(report)
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Stop::Usage(format!("{}: {e}", path.display())))
}

fn read_input(path: Option<&PathBuf>) -> Res<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => read(p),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Stop::Usage(format!("standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn write(path: &Path, content: &str) -> Res<()> {
    fs::write(path, content).map_err(|e| Stop::Usage(format!("{}: {e}", path.display())))
}

fn detect_format(source: &str) -> SpecFormat {
    if source.trim_start().starts_with('<') {
        SpecFormat::Tei
    } else {
        SpecFormat::Tabular
    }
}

fn output_format(g: &Global) -> SpecFormat {
    match g.format {
        Format::Tabular => SpecFormat::Tabular,
        Format::Tei => SpecFormat::Tei,
    }
}

fn load_spec_file(path: &Path) -> Res<Specification> {
    let source = read(path)?;
    load_spec(&source, detect_format(&source)).map_err(|e| data_error("parse-error", path.display().to_string(), e))
}

fn required_spec(g: &Global) -> Res<Specification> {
    let path = g.spec.as_ref().ok_or_else(|| Stop::Usage("--spec FILE is required".into()))?;
    load_spec_file(path)
}

fn optional_spec(g: &Global) -> Res<Option<Specification>> {
    g.spec.as_ref().map(|p| load_spec_file(p)).transpose()
}

fn required_lang(g: &Global) -> Res<String> {
    g.lang.clone().ok_or_else(|| Stop::Usage("--lang is required".into()))
}

fn ordering_of(g: &Global, spec: &Specification, language: &str) -> Ordering {
    match g.ordering {
        Some(OrderingArg::Common) => Ordering::Common,
        Some(OrderingArg::Particular) => Ordering::Particular,
        None => spec.native_ordering(language),
    }
}

fn codec<'a>(g: &Global, spec: &'a Specification) -> Codec<'a> {
    Codec::with_mode(spec, if g.lenient { DecodeMode::Lenient } else { DecodeMode::Canonical })
}

pub fn spec(g: &Global, cmd: SpecCmd) -> Result<Output, String> {
    finish(g, spec_inner(g, cmd))
}

fn spec_inner(g: &Global, cmd: SpecCmd) -> Res<Output> {
    let mut out = Output::default();
    match cmd {
        SpecCmd::Validate => {
            let spec = required_spec(g)?;
            return Ok(report_output(g, &spec.check()));
        }
        SpecCmd::Stats => {
            let spec = required_spec(g)?;
            out.stdout.push_str("category\tname\tattributes\tvalues\tlanguages\n");
            for s in spec_stats(&spec) {
                out.stdout
                    .push_str(&format!("{}\t{}\t{}\t{}\t{}\n", s.code, s.name, s.attributes, s.values, s.languages));
            }
        }
        SpecCmd::Split { seeds, new_language } => {
            let spec = required_spec(g)?;
            let section = split(&spec, &seeds, &new_language).map_err(|e| data_error("split", &new_language, e))?;
            out.stdout = emit_language_section(&section, output_format(g));
        }
        SpecCmd::Merge { section, output } => {
            let spec = required_spec(g)?;
            let source = read(&section)?;
            let parsed: LanguageSection = load_section(&source, detect_format(&source))
                .map_err(|e| data_error("parse-error", section.display().to_string(), e))?;
            match merge(&spec, &parsed) {
                Ok((merged, records)) => {
                    let text = emit_spec(&merged, output_format(g));
                    match output {
                        Some(path) => {
                            write(&path, &text)?;
                            out.stdout = records_to_text(&records);
                        }
                        None => {
                            out.stdout = text;
                            out.stderr = records_to_text(&records);
                        }
                    }
                }
                Err(e) => {
                    out.stdout = records_to_text(&e.conflicts);
                    out.failed = true;
                }
            }
        }
        SpecCmd::Diff { old, new } => {
            let (a, b) = (load_spec_file(&old)?, load_spec_file(&new)?);
            out.stdout = records_to_text(&diff(&a, &b));
        }
        SpecCmd::Render => {
            let spec = required_spec(g)?;
            out.stdout = render_report(&spec, g.lang.as_deref());
        }
    }
    Ok(out)
}

pub fn msd(g: &Global, cmd: MsdCmd) -> Result<Output, String> {
    finish(g, msd_inner(g, cmd))
}

/// Non-blank input lines with their line numbers.
fn lines(source: &str) -> Vec<(usize, &str)> {
    source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

/// An input line as an MSD: `lang:MSD` or a bare MSD in `--lang`.
fn msd_of(g: &Global, spec: &Specification, line: &str) -> Res<Msd> {
    let probe = Msd::from_prefixed(line, "", Ordering::Common);
    let language = if probe.language.is_empty() {
        required_lang(g)?
    } else {
        probe.language.clone()
    };
    Ok(Msd::new(probe.text, &language, ordering_of(g, spec, &language)).localised(g.localise))
}

fn msd_inner(g: &Global, cmd: MsdCmd) -> Res<Output> {
    let spec = required_spec(g)?;
    let codec = codec(g, &spec);
    let mut out = Output::default();
    let fail = |out: &mut Output, n: usize, line: &str, reason: String| {
        out.stderr.push_str(&format!("line {n}: `{line}`: {reason}\n"));
        out.failed = true;
    };
    // decoding falls back to the common ordering unless one was asked for
    let decode = |msd: &Msd| {
        let first = codec.decode(msd);
        if first.is_err() && g.ordering.is_none() && msd.ordering == Ordering::Particular {
            let common = Msd { ordering: Ordering::Common, ..msd.clone() };
            if let Ok(fs) = codec.decode(&common) {
                return Ok(fs);
            }
        }
        first
    };
    match cmd {
        MsdCmd::Decode { input } => {
            let source = read_input(input.as_ref())?;
            for (n, line) in lines(&source) {
                let msd = msd_of(g, &spec, line)?;
                match decode(&msd).and_then(|fs| codec.expand_features(&fs, ExpansionForm::Minimal)) {
                    Ok(e) => out.stdout.push_str(&format!("{line}\t{e}\n")),
                    Err(e) => {
                        out.stdout.push('\n');
                        fail(&mut out, n, line, e.to_string());
                    }
                }
            }
        }
        MsdCmd::Expand { input, form } => {
            let form: ExpansionForm = form.parse().map_err(Stop::Usage)?;
            let source = read_input(input.as_ref())?;
            for (n, line) in lines(&source) {
                let msd = msd_of(g, &spec, line)?;
                match decode(&msd).and_then(|fs| codec.expand_features(&fs, form)) {
                    Ok(e) => out.stdout.push_str(&format!("{e}\n")),
                    Err(e) => {
                        out.stdout.push('\n');
                        fail(&mut out, n, line, e.to_string());
                    }
                }
            }
        }
        MsdCmd::Encode { input } => {
            let source = read_input(input.as_ref())?;
            let language = required_lang(g)?;
            let ordering = ordering_of(g, &spec, &language);
            for (n, line) in lines(&source) {
                match codec
                    .parse_listing(&language, line)
                    .and_then(|fs| codec.encode(&fs, ordering, g.localise))
                {
                    Ok(m) => out.stdout.push_str(&format!("{m}\n")),
                    Err(e) => {
                        out.stdout.push('\n');
                        fail(&mut out, n, line, e.to_string());
                    }
                }
            }
        }
        MsdCmd::Sort { input, keys } => {
            let source = read_input(input.as_ref())?;
            let mut msds = Vec::new();
            for (n, line) in lines(&source) {
                let msd = msd_of(g, &spec, line)?;
                if let Err(e) = codec.decode(&msd) {
                    fail(&mut out, n, line, e.to_string());
                }
                msds.push(msd);
            }
            for msd in codec.sort(&msds) {
                if keys {
                    let key = codec.collation_key(&msd).map_or_else(|_| "-".to_string(), |k| k.to_string());
                    out.stdout.push_str(&format!("{key}\t"));
                }
                out.stdout.push_str(&format!("{msd}\n"));
            }
        }
        MsdCmd::Validate { input } => {
            let source = read_input(input.as_ref())?;
            for (_, line) in lines(&source) {
                let msd = msd_of(g, &spec, line)?;
                match codec.normalise(&msd) {
                    Ok(m) => out.stdout.push_str(&format!("valid\t{line}\t{m}\n")),
                    Err(e) => {
                        out.stdout.push_str(&format!("invalid\t{line}\t{e}\n"));
                        out.failed = true;
                    }
                }
            }
        }
        MsdCmd::Relocalise { input, to } => {
            let source = read_input(input.as_ref())?;
            let native = to == Target::Native;
            for (n, line) in lines(&source) {
                let msd = msd_of(g, &spec, line)?.localised(!native);
                match codec.relocalise(&msd, native) {
                    Ok(m) => out.stdout.push_str(&format!("{m}\n")),
                    Err(e) => {
                        out.stdout.push('\n');
                        fail(&mut out, n, line, e.to_string());
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn lex(g: &Global, cmd: LexCmd) -> Result<Output, String> {
    finish(g, lex_inner(g, cmd))
}

fn load_lex(g: &Global, args: &LexArgs) -> Res<Lexicon> {
    let language = required_lang(g)?;
    let source = read(&args.lexicon)?;
    let options = LexiconOptions {
        separator: if args.whitespace { Separator::Whitespace } else { Separator::Tab },
        equals_shorthand: args.equals,
    };
    load_lexicon(&source, &language, &options).map_err(|errors| {
        let mut report = Report::new();
        for e in errors {
            report.error("line-error", format!("line {}", e.line), e.message);
        }
        Stop::Findings(report)
    })
}

fn load_corpus_file(path: &Path, mode: ParseMode) -> Res<(AnnotatedCorpus, Report)> {
    let source = read(path)?;
    load_corpus(&source, mode).map_err(|e| data_error("parse-error", path.display().to_string(), e))
}

fn lex_inner(g: &Global, cmd: LexCmd) -> Res<Output> {
    let spec = required_spec(g)?;
    match cmd {
        LexCmd::Validate { lex } => {
            let lexicon = load_lex(g, &lex)?;
            Ok(report_output(g, &validate_lexicon(&lexicon, &spec)))
        }
        LexCmd::Index { lex, corpus } => {
            let lexicon = load_lex(g, &lex)?;
            let corpus = match corpus {
                Some(path) => Some(load_corpus_file(&path, ParseMode::Permissive)?.0),
                None => None,
            };
            let entries = build_msd_index(&lexicon, &spec, corpus.as_ref());
            let note = provenance(&lexicon, corpus.as_ref());
            Ok(Output {
                stdout: emit_index(Some(&spec), &lexicon.language, &entries, output_format(g), &note),
                ..Default::default()
            })
        }
    }
}

pub fn corpus(g: &Global, cmd: CorpusCmd) -> Result<Output, String> {
    finish(g, corpus_inner(g, cmd))
}

fn corpus_inner(g: &Global, cmd: CorpusCmd) -> Res<Output> {
    match cmd {
        CorpusCmd::Validate { corpus, strict } => {
            let mode = if strict { ParseMode::Strict } else { ParseMode::Permissive };
            let (text, mut report) = load_corpus_file(&corpus, mode)?;
            let spec = optional_spec(g)?;
            report.extend(validate_corpus(&text, spec.as_ref()));
            Ok(report_output(g, &report))
        }
        CorpusCmd::AttachFslib { corpus } => {
            let spec = required_spec(g)?;
            let (text, _) = load_corpus_file(&corpus, ParseMode::Permissive)?;
            let attached = attach_libraries(&text, &spec).map_err(|e| data_error("attach", &e.token, &e))?;
            Ok(Output {
                stdout: attached.to_xml(),
                ..Default::default()
            })
        }
        CorpusCmd::Stats { corpus } => {
            let (text, _) = load_corpus_file(&corpus, ParseMode::Permissive)?;
            Ok(Output {
                stdout: corpus_stats(&text).to_tsv(),
                ..Default::default()
            })
        }
    }
}

pub fn align(g: &Global, cmd: AlignCmd) -> Result<Output, String> {
    finish(g, align_inner(g, cmd))
}

fn load_group(path: &Path) -> Res<(AlignmentGroup, Report)> {
    let source = read(path)?;
    load_alignment(&source).map_err(|e| data_error("parse-error", path.display().to_string(), e))
}

fn composed(group: AlignmentGroup, null_report: Option<PathBuf>) -> Res<Output> {
    let mut out = Output {
        stdout: group.to_xml(),
        ..Default::default()
    };
    let nulls = group.null_links().count();
    if nulls > 0 {
        out.stderr = format!("{nulls} null-link(s) written as comments\n");
    }
    if let Some(path) = null_report {
        write(&path, &group.null_link_report())?;
    }
    Ok(out)
}

fn align_inner(g: &Global, cmd: AlignCmd) -> Res<Output> {
    match cmd {
        AlignCmd::Validate { alignment, corpora } => {
            let (group, mut report) = load_group(&alignment)?;
            let mut loaded = Vec::new();
            for pair in &corpora {
                let (doc, file) = pair
                    .split_once('=')
                    .ok_or_else(|| Stop::Usage(format!("--corpus expects DOCUMENT=FILE, got `{pair}`")))?;
                let (text, _) = load_corpus_file(Path::new(file), ParseMode::Permissive)?;
                loaded.push((doc, text));
            }
            let refs: Vec<(&str, &AnnotatedCorpus)> = loaded.iter().map(|(d, c)| (*d, c)).collect();
            report.extend(validate_alignment(&group, &refs));
            Ok(report_output(g, &report))
        }
        AlignCmd::Compose { hub_to_x, hub_to_y, null_report } => {
            let (x, _) = load_group(&hub_to_x)?;
            let (y, _) = load_group(&hub_to_y)?;
            let group = compose(&x, &y).map_err(|e| data_error("compose", hub_to_x.display().to_string(), e))?;
            composed(group, null_report)
        }
        AlignCmd::ComposeMultiway { groups, include_hub, hub, null_report } => {
            let mut loaded = Vec::new();
            for path in &groups {
                loaded.push(load_group(path)?.0);
            }
            let refs: Vec<&AlignmentGroup> = loaded.iter().collect();
            let group = match hub {
                Some(hub) => compose_around(&refs, &hub, include_hub),
                None => compose_multiway(&refs, include_hub),
            }
            .map_err(|e| data_error("compose", groups[0].display().to_string(), e))?;
            composed(group, null_report)
        }
    }
}
