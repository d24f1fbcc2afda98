use std::path::Path;

use branchgroups_core::parse::annotate;
use branchgroups_core::verify::run_all;
use branchgroups_core::{
    builtin, classify, is_finite_grigorchuk, is_finite_gs3, membership, quotient, replay_certificate, Certificate,
    Classification, Engine, EngineConfig, Error, Family, FinitenessVerdict, GrigorchukCaps, GroupPreset,
    MembershipVerdict, SubgroupSpec, VerifyOptions, Vertex, Word,
};
use serde_json::{json, Value};

use crate::{Cli, Command, Format};

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;

/// A command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }

    /// Classifies a core error, annotating parse errors against `input`.
    fn from_error(err: Error, input: &str) -> Self {
        match err {
            Error::Parse { .. } => Failure::parse(format!("{err}\n{}", annotate(input, &err))),
            Error::UnknownSymbol(_) | Error::BadVertex { .. } | Error::InvalidPreset(_) => Failure::parse(err.to_string()),
            other => Failure::domain(other.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

struct Session<'a> {
    cli: &'a Cli,
    engine: Engine,
}

impl Session<'_> {
    /// Prints one record: `text` in text mode, `json` as one line otherwise.
    fn emit(&self, text: impl AsRef<str>, json: Value) {
        match self.cli.format {
            Format::Text => println!("{}", text.as_ref()),
            Format::JsonLines => println!("{json}"),
        }
    }

    fn word(&self, text: &str) -> Result<Word, Failure> {
        self.engine.word(text).map_err(|e| Failure::from_error(e, text))
    }

    fn show(&self, g: &Word) -> String {
        self.engine.show(g)
    }

    fn subgroup(&self, path: &str) -> Result<SubgroupSpec, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::domain(format!("{path}: {e}")))?;
        SubgroupSpec::parse(&self.engine, &text).map_err(|e| Failure::parse(format!("{path}: {e}")))
    }

    fn check_level(&self, level: usize) -> Result<(), Failure> {
        if level > self.cli.max_level {
            return Err(Failure::domain(format!(
                "level {level} is above the level cap of {} (raise it with --max-level)",
                self.cli.max_level
            )));
        }
        Ok(())
    }

    fn decomposition(&self, g: &Word) -> (String, Vec<String>) {
        let d = self.engine.decompose(g);
        (d.root_perm.to_string(), d.sections.iter().map(|s| self.show(s)).collect())
    }

    fn decomposition_text(&self, label: &str, g: &Word) -> String {
        let (root, sections) = self.decomposition(g);
        format!("{label}root: {root}\n{label}sections: {}", sections.join(", "))
    }
}

fn load_preset(id: &str) -> Result<GroupPreset, Failure> {
    if let Some(preset) = builtin(id) {
        return Ok(preset);
    }
    if Path::new(id).is_file() {
        let text = std::fs::read_to_string(id).map_err(|e| Failure::domain(format!("{id}: {e}")))?;
        return GroupPreset::from_toml(&text).map_err(|e| Failure::parse(format!("{id}: {e}")));
    }
    Err(Failure::parse(format!(
        "unknown group `{id}`: expected gs<p> for an odd prime p, grigorchuk, or a preset file"
    )))
}

pub fn run(cli: &Cli) -> u8 {
    let outcome = load_preset(&cli.group).and_then(|preset| {
        let session = Session {
            cli,
            engine: Engine::with_config(preset, EngineConfig::from_env()),
        };
        dispatch(&session)
    });
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            match cli.format {
                Format::Text => eprintln!("error: {}", failure.message),
                Format::JsonLines => {
                    println!("{}", json!({"error": failure.message, "exit": failure.code}));
                }
            }
            failure.code
        }
    }
}

fn dispatch(s: &Session) -> Outcome {
    match &s.cli.command {
        Command::Eval { word, decomp } => eval(s, word, *decomp),
        Command::Eq { lhs, rhs, decomp } => eq(s, lhs, rhs.as_deref(), *decomp),
        Command::Order { word, cap } => order(s, word, *cap),
        Command::Len { word } => len(s, word),
        Command::Section { word, vertex } => section(s, word, vertex),
        Command::Portrait { word, depth } => portrait(s, word, *depth),
        Command::Quotient { level, gens, contains } => cmd_quotient(s, *level, gens.as_deref(), contains),
        Command::Finite { file } => finite(s, file),
        Command::Member { word, file, word_cap } => member(s, word, file, *word_cap),
        Command::Classify { file } => cmd_classify(s, file),
        Command::Verify { filter, samples, timing } => verify(s, filter.clone(), *samples, *timing),
    }
}

fn eval(s: &Session, text: &str, decomp: bool) -> Outcome {
    let g = s.word(text)?;
    let shown = s.show(&g);
    let (root, sections) = s.decomposition(&g);
    let mut out = shown.clone();
    if decomp {
        out = format!("{out}\n{}", s.decomposition_text("", &g));
    }
    s.emit(out, json!({"word": shown, "root": root, "sections": sections}));
    Ok(EXIT_OK)
}

fn eq(s: &Session, lhs: &str, rhs: Option<&str>, decomp: bool) -> Outcome {
    let g = s.word(lhs)?;
    let h = match rhs {
        Some(text) => s.word(text)?,
        None => Word::identity(),
    };
    let equal = s.engine.try_equal(&g, &h).map_err(|e| Failure::from_error(e, lhs))?;
    let mut text = equal.to_string();
    let mut record = json!({"equal": equal, "lhs": s.show(&g), "rhs": s.show(&h)});
    if decomp {
        let (root, sections) = s.decomposition(&g);
        record["lhs_root"] = json!(root);
        record["lhs_sections"] = json!(sections);
        if rhs.is_some() {
            text = format!("{text}\n{}", s.decomposition_text("lhs ", &g));
            text = format!("{text}\n{}", s.decomposition_text("rhs ", &h));
            let (root, sections) = s.decomposition(&h);
            record["rhs_root"] = json!(root);
            record["rhs_sections"] = json!(sections);
        } else {
            text = format!("{text}\n{}", s.decomposition_text("", &g));
        }
    }
    s.emit(text, record);
    Ok(EXIT_OK)
}

fn order(s: &Session, text: &str, cap: u64) -> Outcome {
    let g = s.word(text)?;
    let n = s.engine.order(&g, cap).map_err(|e| Failure::from_error(e, text))?;
    s.emit(n.to_string(), json!({"word": s.show(&g), "order": n}));
    Ok(EXIT_OK)
}

fn len(s: &Session, text: &str) -> Outcome {
    let g = s.word(text)?;
    let l = s.engine.syllable_length(&g);
    s.emit(l.to_string(), json!({"word": s.show(&g), "length": l}));
    Ok(EXIT_OK)
}

fn parse_vertex(s: &Session, text: &str) -> Result<Vertex, Failure> {
    Vertex::parse(text, s.engine.arity()).map_err(|e| Failure::from_error(e, text))
}

fn section(s: &Session, text: &str, vertex: &str) -> Outcome {
    let g = s.word(text)?;
    let v = parse_vertex(s, vertex)?;
    s.check_level(v.level())?;
    let section = s.engine.section(&g, &v).map_err(|e| Failure::from_error(e, text))?;
    let shown = s.show(&section);
    s.emit(&shown, json!({"word": s.show(&g), "vertex": v, "section": shown}));
    Ok(EXIT_OK)
}

fn portrait(s: &Session, text: &str, depth: usize) -> Outcome {
    let g = s.word(text)?;
    s.check_level(depth)?;
    let portrait = s.engine.portrait(&g, depth).map_err(|e| Failure::from_error(e, text))?;
    let json = serde_json::to_value(portrait.to_json(&s.engine)).expect("portraits serialize");
    s.emit(portrait.render(&s.engine).trim_end(), json);
    Ok(EXIT_OK)
}

fn cmd_quotient(s: &Session, level: usize, gens: Option<&str>, contains: &[String]) -> Outcome {
    s.check_level(level)?;
    let generators = match gens {
        Some(path) => s.subgroup(path)?.generators().to_vec(),
        None => (0..s.engine.preset().generators().len())
            .map(|sym| s.engine.preset().letter_word(sym as u8, 1))
            .collect(),
    };
    let q = quotient(&s.engine, &generators, level).map_err(|e| Failure::from_error(e, ""))?;
    let order = q.order().to_string();
    s.emit(&order, json!({"level": level, "order": order}));
    for text in contains {
        let g = s.word(text)?;
        let action = s.engine.level_action(&g, level).map_err(|e| Failure::from_error(e, text))?;
        let member = q.contains_perm(&action);
        s.emit(
            format!("{}: {member}", s.show(&g)),
            json!({"level": level, "word": s.show(&g), "contains": member}),
        );
    }
    Ok(EXIT_OK)
}

fn trace_text(trace: &[branchgroups_core::subgroup::TraceStep]) -> String {
    trace
        .iter()
        .map(|step| {
            let mut line = format!("  [{}] {}: {}", serde_json::to_value(step.kind).unwrap().as_str().unwrap_or(""), step.vertex, step.note);
            if !step.before.is_empty() {
                line.push_str(&format!("\n      from {}", step.before.join(", ")));
            }
            if !step.after.is_empty() {
                line.push_str(&format!("\n      to {}", step.after.join(", ")));
            }
            line
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn certificate_text(certificate: &Certificate) -> String {
    match certificate {
        Certificate::Generates { generators, products } => {
            let mut lines = vec![format!("certificate: section generated by {}", generators.join(", "))];
            for product in products {
                let factors: Vec<String> = product
                    .factors
                    .iter()
                    .map(|&(i, e)| if e == 1 { format!("g{i}") } else { format!("g{i}^{e}") })
                    .collect();
                lines.push(format!("  {} = {}", factors.join(" "), product.value));
            }
            lines.join("\n")
        }
        Certificate::Roadmap {
            parent,
            digit,
            schreier_generator,
            section,
        } => format!(
            "certificate: below {parent}, the Schreier generator {schreier_generator} has section {section} at {digit} with root action"
        ),
        Certificate::Missing { reason } => format!("certificate: none ({reason})"),
    }
}

fn finiteness_verdict(s: &Session, h: &SubgroupSpec) -> Result<FinitenessVerdict, Failure> {
    let result = match s.engine.preset().family() {
        Family::Grigorchuk => is_finite_grigorchuk(&s.engine, h, &GrigorchukCaps::default()),
        _ => is_finite_gs3(&s.engine, h),
    };
    result.map_err(|e| Failure::from_error(e, ""))
}

fn finite(s: &Session, file: &str) -> Outcome {
    let h = s.subgroup(file)?;
    let verdict = finiteness_verdict(s, &h)?;
    let mut json = serde_json::to_value(&verdict).expect("verdicts serialize");
    json["subgroup"] = json!(h.generator_strings());
    let mut text = vec![verdict.label().to_string()];
    let code = match &verdict {
        FinitenessVerdict::Finite { order, .. } => {
            text.push(match order {
                Some(n) => format!("order: {n}"),
                None => "order: above the enumeration cap".to_string(),
            });
            EXIT_OK
        }
        FinitenessVerdict::Infinite {
            witness, certificate, ..
        } => {
            let replayed = replay_certificate(&s.engine, &h, witness, certificate).map_err(|e| Failure::from_error(e, ""))?;
            json["replayed"] = json!(replayed);
            text.push(format!("witness: {witness}"));
            text.push(certificate_text(certificate));
            text.push(format!("replay: {}", if replayed { "verified" } else { "not verified" }));
            EXIT_OK
        }
        FinitenessVerdict::Unknown { reason, .. } => {
            text.push(format!("reason: {reason}"));
            EXIT_UNKNOWN
        }
    };
    if !verdict.trace().is_empty() {
        text.push("trace:".into());
        text.push(trace_text(verdict.trace()));
    }
    s.emit(text.join("\n"), json);
    Ok(code)
}

fn member(s: &Session, text: &str, file: &str, word_cap: usize) -> Outcome {
    let g = s.word(text)?;
    let k = s.subgroup(file)?;
    let verdict =
        membership(&s.engine, &g, &k, word_cap, s.cli.max_level).map_err(|e| Failure::from_error(e, text))?;
    let mut json = serde_json::to_value(&verdict).expect("verdicts serialize");
    json["word"] = json!(s.show(&g));
    let (line, code) = match &verdict {
        MembershipVerdict::In { word, .. } => (format!("IN\nwitness: {word}"), EXIT_OK),
        MembershipVerdict::NotIn { level } => (format!("NOT-IN level {level}"), EXIT_OK),
        MembershipVerdict::Unknown { word_cap, level_cap } => (
            format!("UNKNOWN\nno product of at most {word_cap} generators matched, no separation up to level {level_cap}"),
            EXIT_UNKNOWN,
        ),
    };
    s.emit(line, json);
    Ok(code)
}

fn cmd_classify(s: &Session, file: &str) -> Outcome {
    let preset = s.engine.preset();
    if !(preset.is_gupta_sidki() && preset.arity() == 3) {
        return Err(Failure::domain(format!("classify requires the gs3 preset, got `{}`", preset.name())));
    }
    let h = s.subgroup(file)?;
    let class = classify(&s.engine, &h);
    let json = serde_json::to_value(&class).expect("classifications serialize");
    let (line, code) = match &class {
        Classification::Finite { order } => (
            match order {
                Some(n) => format!("FINITE (order {n})"),
                None => "FINITE".to_string(),
            },
            EXIT_OK,
        ),
        Classification::InfiniteCommensurableWithGOrGxG { witness } => (
            format!("INFINITE, commensurable with G or G x G (witness vertex {witness})"),
            EXIT_OK,
        ),
        Classification::Unknown { reason } => (format!("UNKNOWN ({reason})"), EXIT_UNKNOWN),
    };
    s.emit(line, json);
    Ok(code)
}

fn verify(s: &Session, filter: Option<String>, samples: usize, timing: bool) -> Outcome {
    let options = VerifyOptions {
        seed: s.cli.seed,
        length_samples: samples,
        level_budget: s.cli.max_level.min(5),
        filter,
        ..VerifyOptions::default()
    };
    let summary = run_all(&s.engine, &options).map_err(|e| Failure::from_error(e, ""))?;
    for report in &summary.reports {
        let seed = report.seed.map_or("-".to_string(), |x| x.to_string());
        let mut text = format!("{} {} {}ms seed={seed}", report.status(), report.name, report.ms);
        if let Some(counterexample) = &report.counterexample {
            text.push_str(&format!("\n  {}: {counterexample}", report.detail));
        }
        let mut json = serde_json::to_value(report).expect("reports serialize");
        if !timing {
            json.as_object_mut().expect("reports are objects").remove("ms");
        }
        s.emit(text, json);
    }
    let mut json = json!({
        "summary": {"seed": summary.seed, "total": summary.total, "passed": summary.passed, "failed": summary.failed}
    });
    if timing {
        json["summary"]["ms"] = json!(summary.reports.iter().map(|r| r.ms).sum::<u64>());
    }
    s.emit(format!("{} of {} checks passed", summary.passed, summary.total), json);
    Ok(if summary.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}
