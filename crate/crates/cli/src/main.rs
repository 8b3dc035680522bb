//! `engel`: command-line front end for the Engel workbench.
//!
//! Exit codes: 0 when every requested check passed or was decided in the
//! positive, 1 when a check failed, an element is not Engel, a verdict is
//! undetermined or an experimental claim was falsified, 2 on usage or input
//! errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use engel_core::catalog::{self, AnyLie, Model};
use engel_core::group::{self, Automorphism, FiniteGroup, Strategy};
use engel_core::lie::{self, EngelKind, EngelOptions, LieAlgebra};
use engel_core::suites::{self, SuiteOptions, SUITES};
use engel_core::words::{self, ConjConvention, SequenceId, SequenceKind, SequenceSpec};
use engel_core::{Error, Field, Report, RunConfig, Verdict};

#[derive(Parser)]
#[command(name = "engel", version, about = "Engel-like sequences, radicals and identities in Lie algebras and finite groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    noun: Noun,
}

#[derive(Args, Clone)]
struct Common {
    /// Worker threads for parallel scans (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Iteration bound for open-ended sequence searches.
    #[arg(long, global = true, default_value_t = 50)]
    max_iter: usize,
    #[arg(long, global = true, default_value = "class-reps")]
    strategy: String,
    #[arg(long, global = true, default_value = "right")]
    conj_convention: String,
    /// Largest group order enumerated.
    #[arg(long, global = true, default_value_t = group::DEFAULT_ORDER_CAP)]
    order_cap: usize,
    /// Largest vector space enumerated over a finite field.
    #[arg(long, global = true, default_value_t = lie::DEFAULT_ENUMERATION_CAP)]
    enumeration_cap: u64,
    /// Report 0 ms instead of wall time, so output is byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Source {
    /// Builtin model name, e.g. sl2, jacobson:5, sym:4, psl2:7.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    /// JSON model file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Noun {
    /// Lie algebras given by structure constants.
    #[command(subcommand)]
    Lie(LieVerb),
    /// Finite groups.
    #[command(subcommand)]
    Group(GroupVerb),
    /// Two-variable word sequences.
    #[command(subcommand)]
    Words(WordsVerb),
    /// Run a bundled cross-check (or `all`).
    Verify {
        #[arg(value_parser = suite_names())]
        suite: String,
        /// Random elements per algebra in sampled checks.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Largest n in the group identity scans.
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
}

fn suite_names() -> Vec<&'static str> {
    let mut v = SUITES.to_vec();
    v.push("all");
    v
}

#[derive(Subcommand)]
enum LieVerb {
    /// Is the n-th term of v-lie or w-lie identically zero?
    Identity {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = "v-lie")]
        seq: String,
        #[arg(long)]
        n: usize,
    },
    /// Decide whether y is an Engel element of the given kind.
    Engel {
        #[command(flatten)]
        src: Source,
        /// Vector as "[c0,c1,...]" or a combination like "e_+ - 2*h".
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "v")]
        kind: String,
    },
    /// All Engel elements of a kind (finite fields only).
    EngelSet {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = "v")]
        kind: String,
    },
    /// Solvable radical and nilradical (characteristic 0).
    Radical {
        #[command(flatten)]
        src: Source,
    },
    /// Iterates of a sequence at concrete x, y.
    Values {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = "v-lie")]
        seq: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Dimension, solvability, nilpotency and series dimensions.
    Info {
        #[command(flatten)]
        src: Source,
    },
    /// Canonical JSON structure-constant file.
    Export {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand)]
enum GroupVerb {
    /// Is u_n an identity of G? Reports the least such n when it is.
    Identity {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = "s-bww")]
        seq: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Exact set of u-Engel elements.
    EngelSet {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = "e")]
        seq: String,
        /// Compare the set with a radical.
        #[arg(long, value_parser = ["fitting", "radical"])]
        compare: Option<String>,
    },
    /// Solvable radical, Fitting subgroup and, for semisimple groups, the CR-radical.
    Radical {
        #[command(flatten)]
        src: Source,
    },
    /// Is an automorphism u-Engel? Evaluated in G extended by the automorphism.
    AutEngel {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = "e")]
        seq: String,
        /// Conjugation by a permutation in cycle notation (may lie outside G).
        #[arg(long, conflicts_with = "swap")]
        conj_by: Option<String>,
        /// The factor swap of a direct square.
        #[arg(long)]
        swap: bool,
    },
    /// Order, classes and generators.
    Info {
        #[command(flatten)]
        src: Source,
    },
    /// Canonical JSON group file.
    Export {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand)]
enum WordsVerb {
    /// Expanded words u_1..u_n.
    Generate {
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Correctness thresholds under x -> 1 and y -> 1.
    Correct {
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Autocorrectness by y-exponent sums.
    Autocorrect {
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
}

/// What a command produced: reports, or raw text for exports.
enum Output {
    Reports(Vec<Report>),
    Raw(String),
}

struct Ctx {
    common: Common,
    config: RunConfig,
}

impl Ctx {
    fn new(common: Common) -> Result<Self, Error> {
        let strategy: Strategy = common.strategy.parse()?;
        let conj: ConjConvention = common.conj_convention.parse()?;
        let config = RunConfig {
            seed: common.seed,
            max_iter: common.max_iter,
            strategy: match strategy {
                Strategy::Full => "full",
                Strategy::ClassReps => "class-reps",
            }
            .to_string(),
            conj_convention: conj,
            enumeration_cap: common.enumeration_cap,
            group_order_cap: common.order_cap,
            ..RunConfig::default()
        };
        Ok(Ctx { common, config })
    }

    fn strategy(&self) -> Strategy {
        self.common.strategy.parse().expect("validated")
    }

    fn engel_options(&self) -> EngelOptions {
        EngelOptions {
            max_n: self.config.max_iter,
            enumeration_cap: self.config.enumeration_cap,
            monomial_cap: self.config.monomial_cap,
            ..EngelOptions::default()
        }
    }

    fn seq(&self, text: &str, kind: SequenceKind) -> Result<SequenceSpec, Error> {
        Ok(SequenceId::parse_with_kind(text, kind)?
            .spec()
            .with_conj(self.config.conj_convention))
    }

    fn finish(&self, mut report: Report, started: Instant) -> Report {
        report.config = serde_json::to_value(&self.config).expect("serializable");
        report.millis = if self.common.no_timing {
            0
        } else {
            started.elapsed().as_millis() as u64
        };
        report
    }

    fn lie(&self, src: &Source) -> Result<AnyLie, Error> {
        match self.model(src)? {
            Model::Lie(l) => Ok(l),
            Model::Group(_) => Err(Error::BadParams {
                model: describe(src),
                reason: "expected a Lie algebra".into(),
            }),
        }
    }

    fn group(&self, src: &Source) -> Result<FiniteGroup, Error> {
        match (&src.builtin, &src.file) {
            (Some(name), _) => catalog::builtin_group_capped(name, self.config.group_order_cap),
            (None, Some(_)) => match self.model(src)? {
                Model::Group(g) => Ok(g),
                Model::Lie(_) => Err(Error::BadParams {
                    model: describe(src),
                    reason: "expected a group".into(),
                }),
            },
            (None, None) => Err(missing_source()),
        }
    }

    fn model(&self, src: &Source) -> Result<Model, Error> {
        match (&src.builtin, &src.file) {
            (Some(name), _) => catalog::builtin_lie(name).map(Model::Lie),
            (None, Some(path)) => catalog::ingest_capped(path, self.config.group_order_cap),
            (None, None) => Err(missing_source()),
        }
    }
}

fn missing_source() -> Error {
    Error::BadParams {
        model: "-".into(),
        reason: "one of --builtin or --file is required".into(),
    }
}

fn describe(src: &Source) -> String {
    src.builtin
        .clone()
        .or_else(|| src.file.as_ref().map(|p| p.display().to_string()))
        .unwrap_or_default()
}

fn exit_code(report: &Report) -> u8 {
    match report.verdict {
        Verdict::Holds | Verdict::Engel | Verdict::ExperimentalPass => 0,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match Ctx::new(cli.common.clone()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if ctx.common.threads > 0 {
        pool = pool.num_threads(ctx.common.threads);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| run(&ctx, cli.noun));
    match result {
        Ok(Output::Raw(text)) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Ok(Output::Reports(reports)) => {
            for r in &reports {
                let line = match ctx.common.format {
                    Format::Json => r.to_json_line(),
                    Format::Text => render_text(r),
                };
                emit(&format!("{line}\n"));
            }
            ExitCode::from(reports.iter().map(exit_code).max().unwrap_or(0))
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn render_text(r: &Report) -> String {
    let mut s = r.to_text();
    if let Some(checks) = r.details.get("checks").and_then(|c| c.as_array()) {
        for c in checks {
            let mark = if c["pass"] == json!(true) { "pass" } else { "FAIL" };
            s.push_str(&format!("\n  {mark}  {}", c["check"].as_str().unwrap_or("")));
        }
    }
    s
}

fn run(ctx: &Ctx, noun: Noun) -> Result<Output, Error> {
    match noun {
        Noun::Lie(verb) => run_lie(ctx, verb),
        Noun::Group(verb) => run_group(ctx, verb),
        Noun::Words(verb) => run_words(ctx, verb),
        Noun::Verify { suite, samples, n } => {
            let opts = SuiteOptions {
                config: ctx.config.clone(),
                samples,
                identity_n: n,
            };
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut reports = Vec::new();
            for name in names {
                let started = Instant::now();
                let r = suites::run_suite(name, &opts)?;
                reports.push(ctx.finish(r, started));
            }
            Ok(Output::Reports(reports))
        }
    }
}

macro_rules! with_lie {
    ($any:expr, $l:ident => $body:expr) => {
        match $any {
            AnyLie::Rational($l) => $body,
            AnyLie::Finite($l) => $body,
        }
    };
}

fn run_lie(ctx: &Ctx, verb: LieVerb) -> Result<Output, Error> {
    let started = Instant::now();
    let report = match verb {
        LieVerb::Identity { src, seq, n } => {
            let any = ctx.lie(&src)?;
            let seq = ctx.seq(&seq, SequenceKind::Lie)?;
            let mut r = with_lie!(&any, l => lie::identity_check(l, &seq, n, &ctx.engel_options())?.1);
            r.inputs["model"] = json!(describe(&src));
            r
        }
        LieVerb::Engel { src, y, kind } => {
            let any = ctx.lie(&src)?;
            let kind: EngelKind = kind.parse()?;
            with_lie!(&any, l => engel_report(ctx, l, &src, &y, kind)?)
        }
        LieVerb::EngelSet { src, kind } => {
            let any = ctx.lie(&src)?;
            let kind: EngelKind = kind.parse()?;
            let mut r = with_lie!(&any, l => lie::engel_set(l, kind, &ctx.engel_options())?.1);
            r.inputs["model"] = json!(describe(&src));
            r
        }
        LieVerb::Radical { src } => {
            let any = ctx.lie(&src)?;
            with_lie!(&any, l => {
                let rad = lie::solvable_radical(l)?;
                let nil = lie::nilradical(l)?;
                let ok = lie::verify_solvable_radical(l, &rad)? && lie::verify_nilradical(l, &nil)?;
                let mut r = Report::new("radicals", if ok { Verdict::Holds } else { Verdict::Fails });
                r.inputs = json!({ "model": describe(&src) });
                if !ok {
                    r.witness = Some(json!("self-check failed"));
                }
                r.details = json!({
                    "solvable_radical": rad.basis().iter().map(|v| l.format_vector(v)).collect::<Vec<_>>(),
                    "nilradical": nil.basis().iter().map(|v| l.format_vector(v)).collect::<Vec<_>>(),
                });
                r
            })
        }
        LieVerb::Values { src, seq, x, y, z, n } => {
            let any = ctx.lie(&src)?;
            let seq = ctx.seq(&seq, SequenceKind::Lie)?;
            with_lie!(&any, l => {
                let (xv, yv) = (l.parse_vector(&x)?, l.parse_vector(&y)?);
                let zv = z.as_deref().map(|z| l.parse_vector(z)).transpose()?;
                if seq.id.arity() == 3 && zv.is_none() {
                    return Err(Error::ArityMismatch { expected: 3, got: 2 });
                }
                let vals = lie::sequence_values(l, &seq, &xv, &yv, zv.as_deref(), n);
                let mut r = Report::new("values", Verdict::Holds);
                r.inputs = json!({ "model": describe(&src), "seq": seq.id, "x": x, "y": y, "n": n });
                r.details = json!(vals.iter().map(|v| l.format_vector(v)).collect::<Vec<_>>());
                r.iterations = n as u64;
                r
            })
        }
        LieVerb::Info { src } => {
            let any = ctx.lie(&src)?;
            with_lie!(&any, l => {
                let derived = l.series(lie::SeriesKind::Derived, None)?;
                let lower = l.series(lie::SeriesKind::LowerCentral, None)?;
                let mut r = Report::new("info", Verdict::Holds);
                r.inputs = json!({ "model": describe(&src) });
                r.details = json!({
                    "dim": l.dim(),
                    "field": l.field().spec().to_string(),
                    "basis": l.names(),
                    "solvable": l.is_solvable(),
                    "nilpotent": l.is_nilpotent(),
                    "perfect": l.is_perfect(),
                    "derived_dims": derived.iter().map(|s| s.dim()).collect::<Vec<_>>(),
                    "lower_central_dims": lower.iter().map(|s| s.dim()).collect::<Vec<_>>(),
                });
                r
            })
        }
        LieVerb::Export { src } => {
            let any = ctx.lie(&src)?;
            return Ok(Output::Raw(catalog::canonical_json(&any.to_json())));
        }
    };
    Ok(Output::Reports(vec![ctx.finish(report, started)]))
}

fn engel_report<F: Field>(ctx: &Ctx, l: &LieAlgebra<F>, src: &Source, y: &str, kind: EngelKind) -> Result<Report, Error> {
    let yv = l.parse_vector(y)?;
    let v = lie::engel_test(l, &yv, kind, &ctx.engel_options())?;
    let mut r = Report::new(format!("engel-{}", kind.as_str()), v.verdict());
    r.inputs = json!({ "model": describe(src), "y": l.format_vector(&yv), "kind": kind.as_str() });
    r.iterations = v.iterations;
    match &v.outcome {
        lie::EngelOutcome::Engel { n } => r.details = json!({ "n": n }),
        lie::EngelOutcome::NotEngel { witness, certificate } => {
            r.witness = Some(json!({ "x": l.vector_json(witness) }));
            r.details = json!({ "certificate": certificate });
        }
        lie::EngelOutcome::Undetermined { max_iterations } => r.details = json!({ "max_iterations": max_iterations }),
    }
    Ok(r)
}

fn run_group(ctx: &Ctx, verb: GroupVerb) -> Result<Output, Error> {
    let started = Instant::now();
    let report = match verb {
        GroupVerb::Identity { src, seq, n } => {
            let g = ctx.group(&src)?;
            let seq = ctx.seq(&seq, SequenceKind::Group)?;
            group::identity_holds(&g, &seq, n, ctx.strategy())?.1
        }
        GroupVerb::EngelSet { src, seq, compare } => {
            let g = ctx.group(&src)?;
            let seq = ctx.seq(&seq, SequenceKind::Group)?;
            let (set, mut r) = group::engel_like_set(&g, &seq)?;
            if let Some(which) = compare {
                let other = match which.as_str() {
                    "fitting" => g.fitting_subgroup(),
                    _ => g.solvable_radical(),
                };
                let equal = set == other;
                r.claim = format!("engel-set-vs-{which}");
                r.details["compare"] = json!({ "with": which, "order": other.order(), "equal": equal });
                if !equal {
                    r.verdict = Verdict::Fails;
                    let diff = set
                        .members()
                        .iter()
                        .chain(other.members())
                        .find(|&&x| set.contains(x) != other.contains(x))
                        .copied()
                        .expect("sets differ");
                    r.witness = Some(json!({ "element": g.format_element(diff), "in_engel_set": set.contains(diff) }));
                }
            }
            r
        }
        GroupVerb::Radical { src } => {
            let g = ctx.group(&src)?;
            let r_sub = g.solvable_radical();
            let f_sub = g.fitting_subgroup();
            let ok = g.verify_solvable_radical(&r_sub) && g.verify_fitting(&f_sub);
            let mut r = Report::new("radicals", if ok { Verdict::Holds } else { Verdict::Fails });
            r.inputs = json!({ "group": g.name(), "order": g.order() });
            if !ok {
                r.witness = Some(json!("self-check failed"));
            }
            r.details = json!({ "solvable_radical": r_sub.order(), "fitting": f_sub.order() });
            if r_sub.order() == 1 {
                let cr = group::cr_radical(&g)?;
                r.details["cr_radical"] = json!({
                    "order": cr.radical.order(),
                    "minimal_normal": cr.minimal_normal.iter().map(|m| m.order()).collect::<Vec<_>>(),
                    "components": cr.components.iter().map(|c| json!({
                        "simple_order": c.simple_invariant.0,
                        "factors": c.factors,
                        "order": c.subgroup.order(),
                    })).collect::<Vec<_>>(),
                });
            }
            r
        }
        GroupVerb::AutEngel { src, seq, conj_by, swap } => {
            let g = ctx.group(&src)?;
            let seq = ctx.seq(&seq, SequenceKind::Group)?;
            let sigma = match (conj_by, swap) {
                (Some(c), _) => {
                    let group::Repr::Permutation { degree } = g.repr() else {
                        return Err(Error::NotAnAutomorphism("--conj-by needs a permutation group".into()));
                    };
                    Automorphism::permutation_conjugation(&g, &group::parse_cycles(&c, *degree)?)?
                }
                (None, true) => Automorphism::swap(&g)?,
                (None, false) => Automorphism::identity(&g),
            };
            group::engel_automorphism_test(&g, &sigma, &seq, ctx.config.group_order_cap)?
        }
        GroupVerb::Info { src } => {
            let g = ctx.group(&src)?;
            let mut r = Report::new("info", Verdict::Holds);
            r.inputs = json!({ "group": g.name() });
            let (order, class_sizes) = g.invariant();
            r.details = json!({
                "order": order,
                "class_sizes": class_sizes,
                "generators": g.generators().iter().map(|&x| g.format_element(x)).collect::<Vec<_>>(),
                "solvable": g.is_solvable(&g.whole()),
                "nilpotent": g.is_nilpotent(&g.whole()),
            });
            r
        }
        GroupVerb::Export { src } => {
            let g = ctx.group(&src)?;
            return Ok(Output::Raw(catalog::canonical_json(&catalog::export_group(&g)?)));
        }
    };
    Ok(Output::Reports(vec![ctx.finish(report, started)]))
}

fn run_words(ctx: &Ctx, verb: WordsVerb) -> Result<Output, Error> {
    let started = Instant::now();
    let report = match verb {
        WordsVerb::Generate { seq, n } => {
            let spec = SequenceId::ALL
                .iter()
                .find(|id| id.as_str() == seq)
                .map(|id| id.spec().with_conj(ctx.config.conj_convention))
                .ok_or_else(|| Error::UnknownSequence(seq.clone()))?;
            let terms = (1..=n)
                .map(|k| words::generate(&spec, k, ctx.config.word_cap).map(|t| t.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            let mut r = Report::new("words", Verdict::Holds);
            r.inputs = json!({ "seq": spec.id, "n": n, "conj": spec.conj });
            r.details = json!(terms);
            r.iterations = n as u64;
            r
        }
        WordsVerb::Correct { seq, n } => words::check_correct(&ctx.seq(&seq, SequenceKind::Group)?, n)?,
        WordsVerb::Autocorrect { seq, n } => words::check_autocorrect(&ctx.seq(&seq, SequenceKind::Group)?, n)?,
    };
    Ok(Output::Reports(vec![ctx.finish(report, started)]))
}
