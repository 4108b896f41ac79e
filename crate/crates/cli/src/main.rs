use clap::{Args, Parser, Subcommand, ValueEnum};
use dgx_core::arknit::{brute_force_census, knit, ArQuiver, KnitStatus};
use dgx_core::auscorr::{self, CorrError};
use dgx_core::extmod::is_auslander;
use dgx_core::io::{self, FieldSpec, InputDocument, InputError, ReportDocument};
use dgx_core::pvd::{self, PvdError};
use dgx_core::{Alg, DgModule, Field, Fp, Rational};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "dgx", version, about = "Extended module categories of DG path algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate the input.
    Check(Opts),
    /// Cohomology of the algebra and of the listed modules.
    Cohomology(Opts),
    /// Indecomposables found by knitting.
    Indec(Opts),
    /// The knitted AR quiver with its meshes.
    Ar(Opts),
    /// The DG quiver of the Auslander algebra, in the input schema.
    Gamma(Opts),
    /// Recover the algebra from an Auslander algebra.
    Lambda(Opts),
    /// Auslander verdict with its certificate.
    Auslander(Opts),
    /// Algebra to Auslander algebra and back, with fingerprints.
    Roundtrip(Opts),
    /// Exhaustive census of small presentations against knitting.
    Oracle(Opts),
    /// The knitted translation quiver as bare DOT or JSON.
    Export(Opts),
}

#[derive(Args)]
struct Opts {
    input: PathBuf,
    /// Window size; overrides the document.
    #[arg(short)]
    d: Option<i32>,
    /// `Q`, or a prime field such as `F7`; overrides the document.
    #[arg(long)]
    field: Option<FieldSpec>,
    /// Generators per shift for the oracle census.
    #[arg(long, default_value_t = 2)]
    bound: usize,
    #[arg(long, default_value_t = 200)]
    max_objects: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = pvd::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for the parallel searches.
    #[arg(long)]
    jobs: Option<usize>,
    /// Pass to the d-truncated quotient instead of rejecting the algebra.
    #[arg(long)]
    reduce: bool,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timings: bool,
    /// For `gamma`: write the DG quiver here and print the report instead.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

enum Failure {
    Input(String),
    Compute(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<PvdError> for Failure {
    fn from(e: PvdError) -> Self {
        match e {
            PvdError::Input(m) => Failure::Input(m),
            e => Failure::Compute(e.to_string()),
        }
    }
}

/// What a command produced: report results, or raw text printed as is.
struct Outcome {
    results: Value,
    raw: Option<String>,
    verdict: bool,
}

fn outcome(results: Value, verdict: bool) -> Result<Outcome, Failure> {
    Ok(Outcome { results, raw: None, verdict })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts) = match &cli.command {
        Command::Check(o) => ("check", o),
        Command::Cohomology(o) => ("cohomology", o),
        Command::Indec(o) => ("indec", o),
        Command::Ar(o) => ("ar", o),
        Command::Gamma(o) => ("gamma", o),
        Command::Lambda(o) => ("lambda", o),
        Command::Auslander(o) => ("auslander", o),
        Command::Roundtrip(o) => ("roundtrip", o),
        Command::Oracle(o) => ("oracle", o),
        Command::Export(o) => ("export", o),
    };
    match execute(name, opts) {
        Ok(code) => code,
        Err(Failure::Input(m)) => {
            eprintln!("dgx: input error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("dgx: {m}");
            ExitCode::from(1)
        }
    }
}

fn execute(name: &str, o: &Opts) -> Result<ExitCode, Failure> {
    let text = std::fs::read_to_string(&o.input).map_err(|e| Failure::Input(format!("{}: {e}", o.input.display())))?;
    let doc = io::parse_document(&text)?;
    let d = o.d.or(doc.d).ok_or_else(|| Failure::Input("no window size: pass -d or set \"d\" in the document".into()))?;
    if d < 1 {
        return Err(Failure::Input(format!("d must be at least 1, got {d}")));
    }
    let field = o.field.unwrap_or(doc.field);
    if let Some(n) = o.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Input(e.to_string()))?;
    }
    pvd::set_seed(o.seed);
    let start = Instant::now();
    let out = match field {
        FieldSpec::Q => run::<Rational>(name, o, &doc, field, d),
        FieldSpec::Fp(2) => run::<Fp<2>>(name, o, &doc, field, d),
        FieldSpec::Fp(3) => run::<Fp<3>>(name, o, &doc, field, d),
        FieldSpec::Fp(5) => run::<Fp<5>>(name, o, &doc, field, d),
        FieldSpec::Fp(7) => run::<Fp<7>>(name, o, &doc, field, d),
        FieldSpec::Fp(11) => run::<Fp<11>>(name, o, &doc, field, d),
        FieldSpec::Fp(13) => run::<Fp<13>>(name, o, &doc, field, d),
        FieldSpec::Fp(17) => run::<Fp<17>>(name, o, &doc, field, d),
        FieldSpec::Fp(19) => run::<Fp<19>>(name, o, &doc, field, d),
        FieldSpec::Fp(23) => run::<Fp<23>>(name, o, &doc, field, d),
        FieldSpec::Fp(101) => run::<Fp<101>>(name, o, &doc, field, d),
        FieldSpec::Fp(32003) => run::<Fp<32003>>(name, o, &doc, field, d),
        FieldSpec::Fp(2147483647) => run::<Fp<2147483647>>(name, o, &doc, field, d),
        FieldSpec::Fp(p) => return Err(Failure::Input(format!("F{p} is not supported"))),
    }?;
    match out.raw {
        Some(raw) => print!("{raw}"),
        None => {
            let report = ReportDocument {
                schema: io::REPORT_SCHEMA,
                command: name.into(),
                input: o.input.display().to_string(),
                field: field.to_string(),
                d,
                seed: o.seed,
                timings_ms: o.timings.then(|| start.elapsed().as_millis()),
                results: out.results,
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
        }
    }
    Ok(if out.verdict { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run<F: Field>(name: &str, o: &Opts, doc: &InputDocument, field: FieldSpec, d: i32) -> Result<Outcome, Failure> {
    let alg = io::build_algebra::<F>(&doc.algebra, d, o.reduce)?;
    let modules = doc
        .modules
        .iter()
        .enumerate()
        .map(|(i, m)| Ok((m.name.clone(), io::build_module(&alg, m, d, &format!("modules[{i}]"))?)))
        .collect::<Result<Vec<_>, InputError>>()?;
    match name {
        "check" => {
            let mods: Vec<Value> = modules.iter().map(|(n, x)| json!({"name": n, "generators": x.pres.rank()})).collect();
            outcome(
                json!({
                    "vertices": alg.n_vertices(),
                    "dimension": alg.dim(),
                    "graded_dimensions": graded_dims(&alg),
                    "truncated": true,
                    "modules": mods,
                }),
                true,
            )
        }
        "cohomology" => {
            let reg = DgModule::regular(&alg);
            let mods: Vec<Value> = modules
                .iter()
                .map(|(n, x)| json!({"name": n, "cohomology": x.cohomology_vector(), "label": io::label(x)}))
                .collect();
            outcome(json!({"algebra": reg.cohomology_dims(), "by_vertex": reg.cohomology_vector(), "modules": mods}), true)
        }
        "indec" => {
            let ar = knit(&alg, d, o.max_objects)?;
            let complete = ar.status == KnitStatus::Complete;
            outcome(json!({"status": ar.status, "count": ar.vertices.len(), "indecomposables": vertices(&ar)}), complete)
        }
        "ar" | "export" => {
            let ar = knit(&alg, d, o.max_objects)?;
            let complete = ar.status == KnitStatus::Complete;
            let tq = ar.translation_quiver();
            if name == "export" {
                let raw = tq.export(if o.format == Format::Dot { "dot" } else { "json" })?;
                return Ok(Outcome { results: Value::Null, raw: Some(raw + "\n"), verdict: complete });
            }
            if o.format == Format::Dot {
                return Ok(Outcome { results: Value::Null, raw: Some(tq.to_dot()), verdict: complete });
            }
            let arrows: Vec<(usize, usize)> = ar.arrows.iter().map(|a| (a.src, a.dst)).collect();
            let meshes: Vec<Value> = ar
                .meshes
                .iter()
                .map(|m| {
                    let middle: Vec<usize> = m.into_middle.iter().map(|&a| ar.arrows[a].dst).collect();
                    json!({"start": m.start, "end": m.end, "middle": middle})
                })
                .collect();
            outcome(json!({"status": ar.status, "vertices": vertices(&ar), "arrows": arrows, "meshes": meshes}), complete)
        }
        "gamma" => {
            let corr = auscorr::lambda_to_gamma(&alg, d, o.max_objects).map_err(corr_failure)?;
            let pres = auscorr::dg_quiver_presentation(&corr.ar).map_err(corr_failure)?;
            let cmp = auscorr::compare_presentation(&corr, &pres).map_err(corr_failure)?;
            let verdict = corr.certificate.auslander.is_auslander && cmp.fingerprint_equal;
            let emitted = io::quiver_document(&pres.quiver, field, Some(d));
            let text = serde_json::to_string_pretty(&emitted).expect("documents serialize") + "\n";
            match &o.emit {
                None => Ok(Outcome { results: Value::Null, raw: Some(text), verdict }),
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    let galg = io::build_algebra::<F>(&emitted.algebra, d, false)?;
                    outcome(
                        json!({
                            "emitted": path.display().to_string(),
                            "correspondence": corr.certificate,
                            "presentation": cmp,
                            "auslander": is_auslander(&galg, d),
                        }),
                        verdict,
                    )
                }
            }
        }
        "lambda" => match auscorr::gamma_to_lambda(&alg, d, o.max_objects) {
            Ok(c) => {
                let ok = c.certificate.generator_census == Some(true);
                outcome(json!({"correspondence": c.certificate}), ok)
            }
            Err(CorrError::NotAuslander(cert)) => outcome(json!({"auslander": cert, "refused": "not an Auslander algebra"}), false),
            Err(e) => Err(corr_failure(e)),
        },
        "auslander" => {
            let cert = is_auslander(&alg, d);
            let ok = cert.is_auslander;
            outcome(json!({"auslander": cert}), ok)
        }
        "roundtrip" => {
            if o.reduce && io::build_algebra::<F>(&doc.algebra, d, false).is_err() {
                return Err(Failure::Input(format!("roundtrip needs a {d}-truncated quiver")));
            }
            let q = io::build_quiver::<F>(&doc.algebra)?;
            let cert = auscorr::roundtrip_check(&q, d, o.max_objects).map_err(corr_failure)?;
            let ok = cert.passed;
            outcome(json!({"roundtrip": cert}), ok)
        }
        "oracle" => {
            let ar = knit(&alg, d, o.max_objects)?;
            let census = brute_force_census(&alg, d, o.bound)?;
            let (extra, missing) = census.compare(&ar);
            let objs = ar.objects();
            // Knitted objects the census cannot reach: more generators in some shift than the bound.
            let beyond: Vec<usize> = missing
                .iter()
                .copied()
                .filter(|&v| {
                    let g = objs[v].generator_profile();
                    (0..=d).any(|s| g.iter().filter(|x| x.shift == s).count() > o.bound)
                })
                .collect();
            let ok = census.complete && ar.status == KnitStatus::Complete && extra.is_empty() && beyond.len() == missing.len();
            outcome(
                json!({
                    "bound": o.bound,
                    "candidates": census.candidates,
                    "oracle_complete": census.complete,
                    "knit_status": ar.status,
                    "census": census.objects.len(),
                    "knitted": objs.len(),
                    "only_in_census": extra,
                    "only_knitted": missing,
                    "only_knitted_beyond_bound": beyond,
                    "agree": ok,
                }),
                ok,
            )
        }
        _ => Err(Failure::Input(format!("unknown command {name}"))),
    }
}

fn corr_failure(e: CorrError) -> Failure {
    match e {
        CorrError::Pvd(p) => p.into(),
        e => Failure::Compute(e.to_string()),
    }
}

fn graded_dims<F: Field>(alg: &Alg<F>) -> Value {
    let mut m = std::collections::BTreeMap::new();
    for b in &alg.basis {
        *m.entry(b.degree).or_insert(0usize) += 1;
    }
    json!(m)
}

fn vertices<F: Field>(ar: &ArQuiver<F>) -> Vec<Value> {
    ar.vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let gens: Vec<(String, i32)> = v.obj.generator_profile().iter().map(|g| (ar.alg.vertices[g.vertex].clone(), g.shift)).collect();
            json!({
                "index": i,
                "label": io::label(&v.obj),
                "fingerprint": dgx_core::arknit::fingerprint(&v.obj),
                "projective": v.projective,
                "injective": v.injective,
                "generators": gens,
            })
        })
        .collect()
}
