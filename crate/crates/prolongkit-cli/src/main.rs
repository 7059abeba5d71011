//! Command-line front end: analyze a cubic, verify the catalog entries,
//! and print the dimension-arithmetic tables.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use prolongkit::catalog::CatalogName;
use prolongkit::error::Error as PkError;
use prolongkit::hss::{hss_secant_dim, submaximal_bound, FamilySpec};
use prolongkit::json;
use prolongkit::rat::format_rat;
use prolongkit::report::{analyze, AnalyzeInput, AnalyzeOptions, Report};
use prolongkit::verify::{
    select_entries, verify_dimension_sweep, verify_entry, verify_negative_controls,
    EntryVerification, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "prolongkit",
    about = "Exact symmetry and prolongation analysis of cubic hypersurfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on one cubic and emit a report.
    Analyze(AnalyzeArgs),
    /// Run the expectation battery for catalog entries.
    #[command(name = "verify-severi")]
    VerifySeveri(VerifyArgs),
    /// Dimension sweeps for the classified families.
    Tables(TablesArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Catalog entry name (veronese | segre | grassmannian | octonion).
    #[arg(long, conflicts_with = "cubic")]
    catalog: Option<String>,
    /// Path to a cubic JSON file (monomial or tensor format).
    #[arg(long)]
    cubic: Option<String>,
    /// Skip the prolongation (and classification) stages.
    #[arg(long)]
    skip_prolongation: bool,
    /// Number of smooth cone samples for the Gauss section.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// One-stage solver cross-check cap.
    #[arg(long, default_value_t = 9)]
    max_naive_dim: usize,
    /// Also write the canonical tensor JSON of the analyzed cubic here.
    #[arg(long)]
    emit_cubic: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Entry name or `all`.
    which: String,
    /// Entries to skip (repeatable).
    #[arg(long)]
    skip: Vec<String>,
    /// Include the 27-variable octonion entry in `all`.
    #[arg(long)]
    include_octonion: bool,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct TablesArgs {
    /// Family: I | II | III | IV | V | VI | ii.
    family: String,
    /// Range `lo..hi` (inclusive) for the first Segre parameter.
    #[arg(long)]
    a: Option<String>,
    /// Range for the second Segre parameter.
    #[arg(long)]
    b: Option<String>,
    /// Range for the n parameter (families II, III, IV).
    #[arg(long)]
    n: Option<String>,
    /// Range for the k parameter (family ii).
    #[arg(long)]
    k: Option<String>,
    /// Range for the m parameter (family ii).
    #[arg(long)]
    m: Option<String>,
    /// Add submaximal-bound columns for this rank.
    #[arg(long)]
    check_submaximal: Option<i64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::VerifySeveri(args) => cmd_verify(args),
        Command::Tables(args) => cmd_tables(args),
    };
    match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// `PROLONGKIT_THREADS` caps the worker pool.
fn configure_threads() {
    if let Ok(v) = std::env::var("PROLONGKIT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn exit_code_for(e: &PkError) -> u8 {
    match e {
        PkError::Json(_)
        | PkError::NotHomogeneousCubic { .. }
        | PkError::ParseRational(_)
        | PkError::ZeroForm => 1,
        _ => 2,
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, PkError> {
    let input = match (&args.catalog, &args.cubic) {
        (Some(name), None) => AnalyzeInput::Catalog(CatalogName::parse(name)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| PkError::Json(format!("cannot read {path}: {e}")))?;
            let form = json::parse_cubic(&text)?;
            let name = std::path::Path::new(path)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.clone());
            AnalyzeInput::Cubic { name, form }
        }
        _ => {
            return Err(PkError::BadParams(
                "exactly one of --catalog or --cubic is required".into(),
            ))
        }
    };
    if let Some(path) = &args.emit_cubic {
        let form = match &input {
            AnalyzeInput::Catalog(name) => prolongkit::catalog::build(*name).cubic,
            AnalyzeInput::Cubic { form, .. } => form.clone(),
        };
        std::fs::write(path, json::tensor_json_string(&form))
            .map_err(|e| PkError::Json(format!("cannot write {path}: {e}")))?;
    }
    let opts = AnalyzeOptions {
        samples: args.samples,
        seed: args.seed,
        skip_prolongation: args.skip_prolongation,
        max_naive_dim: args.max_naive_dim,
    };
    let report = analyze(input, &opts)?;
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        _ => render_report_text(&report),
    }
    Ok(ExitCode::SUCCESS)
}

fn render_report_text(r: &Report) {
    println!(
        "input: {} `{}` (dim {})",
        r.input.kind, r.input.name, r.input.dim
    );
    println!("  content hash: {}", r.input.content_hash);
    match (&r.hessian.nonzero, &r.hessian.witness) {
        (true, Some(w)) => println!(
            "hessian: nonzero (witness [{}], det {}, {} trial(s))",
            w.join(", "),
            r.hessian.det.as_deref().unwrap_or("?"),
            r.hessian.trials_used
        ),
        _ => println!(
            "hessian: no witness found in {} trials (inconclusive)",
            r.hessian.trials_used
        ),
    }
    println!("symmetry algebra: dim {}", r.aut.dim);
    if let Some(p) = &r.prolongation {
        println!(
            "prolongation: dim {}, character rank {}{}",
            p.dim,
            p.chi_rank,
            match p.naive_agrees {
                Some(true) => ", one-stage solver agrees",
                Some(false) => ", ONE-STAGE SOLVER DISAGREES",
                None => "",
            }
        );
    }
    if let Some(rows) = &r.classification {
        for c in rows {
            println!(
                "  element {}: member {}, a = {}{}{}",
                c.index,
                c.member,
                c.a.as_deref().unwrap_or("-"),
                if c.unique { ", unique" } else { "" },
                if c.degenerate { ", degenerate" } else { "" }
            );
        }
    }
    println!(
        "gauss samples: {}{}",
        r.gauss.samples.len(),
        match r.gauss.degenerate {
            Some(true) => " (degenerate at all samples)",
            Some(false) => " (not degenerate)",
            None => "",
        }
    );
    for s in &r.gauss.samples {
        println!(
            "  dim null {}, dim gamma {} (projective fiber dim {})",
            s.dim_null,
            s.dim_gamma,
            s.dim_gamma.saturating_sub(1)
        );
    }
    if let Some(note) = &r.gauss.note {
        println!("  note: {note}");
    }
    if let Some(exp) = &r.catalog_expectations {
        println!("catalog expectations:");
        for e in exp {
            println!(
                "  {}: {} (expected {}, got {})",
                e.name,
                if e.pass { "PASS" } else { "FAIL" },
                e.expected,
                e.actual
            );
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, PkError> {
    let entries = select_entries(&args.which, &args.skip, args.include_octonion)?;
    if entries.is_empty() {
        return Err(PkError::BadParams("no entries selected".into()));
    }
    let opts = VerifyOptions {
        samples: args.samples,
        seed: args.seed,
    };
    let mut results: Vec<EntryVerification> = Vec::new();
    for name in entries {
        results.push(verify_entry(name, &opts));
    }
    let mut extra = Vec::new();
    if args.which == "all" {
        extra.extend(verify_dimension_sweep());
        extra.extend(verify_negative_controls());
    }
    let all_pass = results.iter().all(|v| v.all_pass()) && extra.iter().all(|r| r.pass);

    match args.format {
        Format::Json => {
            let payload = serde_json::json!({
                "entries": results,
                "arithmetic": extra,
                "pass": all_pass,
            });
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
        }
        _ => {
            for v in &results {
                println!("== {} ({} ms)", v.entry, v.elapsed_ms);
                for row in &v.rows {
                    println!(
                        "  {:<28} {} (expected {}, got {})",
                        row.name,
                        if row.pass { "PASS" } else { "FAIL" },
                        row.expected,
                        row.actual
                    );
                }
            }
            if !extra.is_empty() {
                println!("== arithmetic");
                for row in &extra {
                    println!(
                        "  {:<28} {} (expected {}, got {})",
                        row.name,
                        if row.pass { "PASS" } else { "FAIL" },
                        row.expected,
                        row.actual
                    );
                }
            }
            if !all_pass {
                let mut failures = Vec::new();
                for v in &results {
                    for row in v.failures() {
                        failures.push(format!("{}/{}", v.entry, row.name));
                    }
                }
                for row in extra.iter().filter(|r| !r.pass) {
                    failures.push(format!("arithmetic/{}", row.name));
                }
                println!("FAILURES: {}", failures.join(", "));
            }
        }
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn parse_range(s: &str) -> Result<(i64, i64), PkError> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| PkError::BadParams(format!("range `{s}` must look like lo..hi")))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| PkError::BadParams(format!("bad range bound in `{s}`")))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| PkError::BadParams(format!("bad range bound in `{s}`")))?;
    if lo > hi {
        return Err(PkError::BadParams(format!("empty range `{s}`")));
    }
    Ok((lo, hi))
}

fn cmd_tables(args: TablesArgs) -> Result<ExitCode, PkError> {
    let specs: Vec<FamilySpec> = match args.family.as_str() {
        "I" => {
            let (alo, ahi) = parse_range(args.a.as_deref().ok_or_else(|| {
                PkError::BadParams("family I needs --a lo..hi and --b lo..hi".into())
            })?)?;
            let (blo, bhi) = parse_range(args.b.as_deref().ok_or_else(|| {
                PkError::BadParams("family I needs --a lo..hi and --b lo..hi".into())
            })?)?;
            (alo..=ahi)
                .flat_map(|a| (blo..=bhi).map(move |b| FamilySpec::SegreI { a, b }))
                .collect()
        }
        "II" | "III" | "IV" => {
            let (lo, hi) = parse_range(args.n.as_deref().ok_or_else(|| {
                PkError::BadParams(format!("family {} needs --n lo..hi", args.family))
            })?)?;
            (lo..=hi)
                .map(|n| match args.family.as_str() {
                    "II" => FamilySpec::PlueckerII { n },
                    "III" => FamilySpec::VeroneseIII { n },
                    _ => FamilySpec::QuadricIV { n },
                })
                .collect()
        }
        "V" => vec![FamilySpec::SpinorV],
        "VI" => vec![FamilySpec::OctonionVI],
        "ii" => {
            let (klo, khi) = parse_range(args.k.as_deref().ok_or_else(|| {
                PkError::BadParams("family ii needs --k lo..hi and --m lo..hi".into())
            })?)?;
            let (mlo, mhi) = parse_range(args.m.as_deref().ok_or_else(|| {
                PkError::BadParams("family ii needs --k lo..hi and --m lo..hi".into())
            })?)?;
            (klo..=khi)
                .flat_map(|k| (mlo..=mhi).map(move |m| FamilySpec::SymplecticIi { k, m }))
                .collect()
        }
        other => {
            return Err(PkError::BadParams(format!(
                "unknown family `{other}` (expected I, II, III, IV, V, VI, ii)"
            )))
        }
    };

    let sep = if args.format == Format::Csv { "," } else { "  " };
    let mut out = std::io::stdout().lock();
    let mut header = vec![
        "family".to_string(),
        "params".to_string(),
        "variety_dim".to_string(),
        "ambient_dim".to_string(),
        "secant_dim".to_string(),
        "hypersurface".to_string(),
    ];
    if args.check_submaximal.is_some() {
        header.extend([
            "dim_L_required".to_string(),
            "dim_L_bound".to_string(),
            "consistent".to_string(),
        ]);
    }
    writeln!(out, "{}", header.join(sep)).ok();
    for spec in specs {
        let dims = hss_secant_dim(spec)?;
        let (fam, params) = describe(spec);
        let mut row = vec![
            fam,
            params,
            dims.variety_dim.to_string(),
            dims.ambient_dim.to_string(),
            dims.secant_dim.to_string(),
            dims.is_hypersurface().to_string(),
        ];
        if let Some(r) = args.check_submaximal {
            match submaximal_bound(spec, r) {
                Ok(c) => row.extend([
                    c.dim_l_required.to_string(),
                    format_rat(&c.dim_l_bound),
                    c.consistent.to_string(),
                ]),
                Err(_) => row.extend(["n/a".into(), "n/a".into(), "n/a".into()]),
            }
        }
        writeln!(out, "{}", row.join(sep)).ok();
    }
    Ok(ExitCode::SUCCESS)
}

fn describe(spec: FamilySpec) -> (String, String) {
    match spec {
        FamilySpec::SegreI { a, b } => ("I".into(), format!("a={a} b={b}")),
        FamilySpec::PlueckerII { n } => ("II".into(), format!("n={n}")),
        FamilySpec::VeroneseIII { n } => ("III".into(), format!("n={n}")),
        FamilySpec::QuadricIV { n } => ("IV".into(), format!("n={n}")),
        FamilySpec::SpinorV => ("V".into(), "-".into()),
        FamilySpec::OctonionVI => ("VI".into(), "-".into()),
        FamilySpec::SymplecticIi { k, m } => ("ii".into(), format!("k={k} m={m}")),
    }
}
