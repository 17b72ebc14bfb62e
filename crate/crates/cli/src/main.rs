//! Command-line front end for the wild Kummer singularity computations.
//!
//! Exit codes: 0 verified/constructed, 1 a mathematical check failed (with a
//! witness in the report), 2 a resource limit was exceeded, 3 usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kummer_core::action::{
    check_quotient_surjectivity, shift_model, ActionError, CyclicAction,
};
use kummer_core::field::{FieldDesc, FieldElem, FieldError};
use kummer_core::formalgroup::{decomposition_from_torsion, enumerate_decompositions};
use kummer_core::groebner::{EngineError, GbCache, Limits, QuotientPresentation};
use kummer_core::kummer::{
    curve_presentation, embedding_dimension, function_field_identities, invariant_generators,
    lemma_phi_check, minimal_presentation, relation_set, shioda_parametrization_check,
    verify_containment, verify_kernel, CurveConfig, KummerError,
};
use kummer_core::local::{verify_normal_form, LocalError};
use kummer_core::poly::{MonomialOrder, MultiPoly, VarRoster};
use kummer_core::report::{entry, CertEntry, Report};
use kummer_core::invariant_basis_bounded;

#[derive(Parser)]
#[command(
    name = "kummer",
    version,
    about = "Invariant rings, relation ideals and singularity normal forms of wild Kummer varieties in characteristic 2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CommonOpts {
    /// Field characteristic p
    #[arg(long = "char", default_value_t = 2, global = true)]
    characteristic: u64,
    /// Extension degree k of F_{p^k} (verify-shioda defaults to 2)
    #[arg(long, global = true)]
    ext: Option<usize>,
    /// Modulus coefficients, ascending and comma-separated, e.g. 1,1,1
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Timeout in seconds for Groebner computations
    #[arg(long, global = true)]
    timeout: Option<u64>,
    /// Cap on intermediate polynomial degrees
    #[arg(long, global = true)]
    degree_cap: Option<u32>,
    /// Groebner cache directory (default: KUMMER_CACHE_DIR or the system temp dir)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Bypass the Groebner cache
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Args)]
struct CurveOpts {
    /// Number of elliptic factors
    #[arg(long)]
    g: u32,
    /// Number of supersingular factors (the remaining ones are ordinary)
    #[arg(long, default_value_t = 0)]
    supersingular: u32,
    /// j-invariants of the ordinary factors, comma-separated field elements
    /// (default: all 1)
    #[arg(long)]
    j: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the trace generators f_M of the invariant ring
    Generators {
        #[command(flatten)]
        curve: CurveOpts,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Print the relation families (1), (2), (3) of the presentation ideal
    Relations {
        #[command(flatten)]
        curve: CurveOpts,
        /// Print the minimal presentation instead of the full families
        #[arg(long)]
        minimal: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check that every relation lies in the kernel of the presentation map
    VerifyContainment {
        #[command(flatten)]
        curve: CurveOpts,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Compute the kernel by elimination and certify it equals the relation ideal
    VerifyKernel {
        #[command(flatten)]
        curve: CurveOpts,
        /// Allow the expensive eliminations with g >= 3
        #[arg(long)]
        allow_heavy: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Embedding dimension of the singularity, certified two ways
    Embdim {
        #[command(flatten)]
        curve: CurveOpts,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Minimal generators and relations of the invariant ring
    MinimalPresentation {
        #[command(flatten)]
        curve: CurveOpts,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify the g = 2 singularity normal forms by formal change of variables
    Singularity {
        /// Number of ordinary factors (0, 1 or 2)
        #[arg(long)]
        r: u32,
        /// j-invariants of the ordinary factors (default: all 1)
        #[arg(long)]
        j: Option<String>,
        /// Series truncation order
        #[arg(long, default_value_t = 12)]
        truncation: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Enumerate symmetric formal-group decompositions of a given dimension
    FormalGroups {
        /// Dimension of the abelian variety
        #[arg(long)]
        dim: u32,
        /// Also classify by 2-torsion count 2^rank
        #[arg(long)]
        torsion: Option<u32>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify the rational parametrization of the superspecial Kummer surface
    VerifyShioda {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify the function-field identities of the superspecial Kummer threefold
    VerifyThreefold {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify the two-generator chart of the supersingular curve and its involution
    VerifyLemmaPhi {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Basis of the invariant classes up to a degree bound
    Invariants {
        #[command(flatten)]
        curve: CurveOpts,
        /// Total degree bound
        #[arg(long)]
        degree: u32,
        /// Work in the free polynomial ring instead of the curve quotient
        #[arg(long)]
        free: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Compare quotient invariants with the image of ambient invariants
    CheckSurjectivity {
        /// Shift exponents e_1,...,e_g (one pair A_i, B_i per entry)
        #[arg(long)]
        e: Option<String>,
        /// Degree bound for the comparison
        #[arg(long, default_value_t = 6)]
        degree: u32,
        /// Run the swap-action counterexample instead of the shift model
        #[arg(long)]
        counterexample: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
}

enum Failure {
    Usage(String),
    Resource(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Failure {
        Failure::Resource(e.to_string())
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<KummerError> for Failure {
    fn from(e: KummerError) -> Failure {
        match e {
            KummerError::Engine(e) => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<ActionError> for Failure {
    fn from(e: ActionError) -> Failure {
        match e {
            ActionError::Engine(e) => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<LocalError> for Failure {
    fn from(e: LocalError) -> Failure {
        match e {
            LocalError::Kummer(k) => k.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

struct Outcome {
    payload: Value,
    certificates: Vec<CertEntry>,
    text: Vec<String>,
}

impl Outcome {
    fn ok(&self) -> bool {
        self.certificates.iter().all(|c| c.ok)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit 2; usage problems are exit 3 here
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let started = Instant::now();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let common = common_of(&cli.command);
    let field = match make_field(common, &cli.command) {
        Ok(f) => f,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(3);
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("resource limit: {msg}");
            return ExitCode::from(2);
        }
    };
    let cache = make_cache(common);
    let outcome = run(&cli.command, &field, cache.as_ref());
    match outcome {
        Ok(outcome) => {
            let ok = outcome.ok();
            let mut rendered = String::new();
            match common.format {
                Format::Text => {
                    for line in &outcome.text {
                        rendered.push_str(line);
                        rendered.push('\n');
                    }
                    for cert in &outcome.certificates {
                        let status = if cert.ok { "PASS" } else { "FAIL" };
                        rendered.push_str(&format!("[{status}] {} -- {}\n", cert.name, cert.detail));
                    }
                    if !outcome.certificates.is_empty() {
                        rendered.push_str(if ok { "PASS\n" } else { "FAIL\n" });
                    }
                }
                Format::Json => {
                    let report = Report {
                        command: argv.join(" "),
                        field: field.as_ref().into(),
                        payload: outcome.payload,
                        certificates: outcome.certificates,
                        wall_time_ms: started.elapsed().as_millis(),
                        cache_hits: cache.as_ref().map(|c| c.hits()).unwrap_or(0),
                    };
                    rendered.push_str(&report.to_json());
                    rendered.push('\n');
                }
            }
            // a consumer may close the pipe early (e.g. `| head`); the exit
            // code must survive that
            let _ = std::io::Write::write_all(&mut std::io::stdout(), rendered.as_bytes());
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("resource limit: {msg}");
            ExitCode::from(2)
        }
    }
}

fn common_of(cmd: &Command) -> &CommonOpts {
    match cmd {
        Command::Generators { common, .. }
        | Command::Relations { common, .. }
        | Command::VerifyContainment { common, .. }
        | Command::VerifyKernel { common, .. }
        | Command::Embdim { common, .. }
        | Command::MinimalPresentation { common, .. }
        | Command::Singularity { common, .. }
        | Command::FormalGroups { common, .. }
        | Command::VerifyShioda { common }
        | Command::VerifyThreefold { common }
        | Command::VerifyLemmaPhi { common }
        | Command::Invariants { common, .. }
        | Command::CheckSurjectivity { common, .. } => common,
    }
}

fn make_field(common: &CommonOpts, cmd: &Command) -> Result<Arc<FieldDesc>, Failure> {
    let default_ext = match cmd {
        // the parametrization needs a primitive cube root of unity
        Command::VerifyShioda { .. } => 2,
        _ => 1,
    };
    let ext = common.ext.unwrap_or(default_ext);
    let modulus = match &common.modulus {
        None => None,
        Some(text) => Some(
            text.split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect::<Result<Vec<u64>, _>>()
                .map_err(|e| Failure::Usage(format!("bad --modulus: {e}")))?,
        ),
    };
    Ok(FieldDesc::new(common.characteristic, ext, modulus)?)
}

fn make_cache(common: &CommonOpts) -> Option<GbCache> {
    if common.no_cache {
        return None;
    }
    let dir = common
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("KUMMER_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| std::env::temp_dir().join("kummer-gb-cache"));
    GbCache::new(dir).ok()
}

fn make_limits(common: &CommonOpts) -> Limits {
    Limits::new(common.timeout.map(Duration::from_secs), common.degree_cap)
}

fn parse_config(field: &Arc<FieldDesc>, curve: &CurveOpts) -> Result<CurveConfig, Failure> {
    if curve.supersingular > curve.g {
        return Err(Failure::Usage(format!(
            "--supersingular {} exceeds --g {}",
            curve.supersingular, curve.g
        )));
    }
    let r = curve.g - curve.supersingular;
    let j = match &curve.j {
        None => (0..r).map(|_| field.one()).collect(),
        Some(text) => {
            let parts: Vec<&str> = text.split(',').collect();
            if parts.len() != r as usize {
                return Err(Failure::Usage(format!(
                    "expected {r} j-invariants for the ordinary factors, got {}",
                    parts.len()
                )));
            }
            parts
                .iter()
                .map(|s| FieldElem::parse(field, s.trim()))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    Ok(CurveConfig::new(field, curve.g, r, j)?)
}

fn run(cmd: &Command, field: &Arc<FieldDesc>, cache: Option<&GbCache>) -> Result<Outcome, Failure> {
    match cmd {
        Command::Generators { curve, .. } => {
            let cfg = parse_config(field, curve)?;
            let gens = invariant_generators(&cfg);
            let mut items = Vec::new();
            let mut text = Vec::new();
            for (mask, poly) in &gens.by_mask {
                items.push(json!({ "subset": mask.label(), "poly": poly.to_text() }));
                text.push(format!("f_{} = {}", mask.label(), poly.to_text()));
            }
            let extra: Vec<String> = gens.extra.iter().map(|p| p.to_text()).collect();
            for e in &extra {
                text.push(format!("extra generator {e}"));
            }
            Ok(Outcome {
                payload: json!({ "generators": items, "extra": extra }),
                certificates: vec![],
                text,
            })
        }
        Command::Relations { curve, minimal, .. } => {
            let cfg = parse_config(field, curve)?;
            let rs = relation_set(&cfg);
            if *minimal {
                let presentation = minimal_presentation(&rs);
                let vars: Vec<String> = presentation.roster().names().to_vec();
                let relations: Vec<String> =
                    presentation.gens().iter().map(|p| p.to_text()).collect();
                let mut text = vec![format!("variables: {}", vars.join(", "))];
                text.extend(relations.iter().map(|r| format!("relation: {r}")));
                Ok(Outcome {
                    payload: json!({ "variables": vars, "relations": relations }),
                    certificates: vec![],
                    text,
                })
            } else {
                let lines = rs.to_text_lines();
                Ok(Outcome {
                    payload: json!({
                        "variables": rs.roster().names(),
                        "relations": lines,
                    }),
                    certificates: vec![],
                    text: lines,
                })
            }
        }
        Command::VerifyContainment { curve, common } => {
            let cfg = parse_config(field, curve)?;
            let report = verify_containment(&cfg, &make_limits(common))?;
            Ok(Outcome {
                payload: json!({ "contained": report.ok, "relations_checked": report.entries.len() }),
                certificates: report.entries,
                text: vec![format!("relation families map into the kernel: {}", report.ok)],
            })
        }
        Command::VerifyKernel {
            curve,
            allow_heavy,
            common,
        } => {
            if curve.g >= 3 && !allow_heavy {
                return Err(Failure::Usage(
                    "kernel elimination with g >= 3 can run for a long time; pass --allow-heavy to attempt it"
                        .into(),
                ));
            }
            let cfg = parse_config(field, curve)?;
            let limits = if common.timeout.is_none() && common.degree_cap.is_none() {
                kummer_core::kummer::default_kernel_limits()
            } else {
                make_limits(common)
            };
            let report = verify_kernel(&cfg, &limits, cache)?;
            let kernel: Vec<String> = report.kernel_gens.iter().map(|p| p.to_text()).collect();
            let mut certificates = Vec::new();
            for (gen, nf) in &report.certificate.a_mod_b {
                certificates.push(entry(
                    format!("kernel generator {} in relation ideal", gen.to_text()),
                    nf.is_zero(),
                    format!("normal form {}", nf.to_text()),
                ));
            }
            for (gen, nf) in &report.certificate.b_mod_a {
                certificates.push(entry(
                    format!("relation {} in elimination kernel", gen.to_text()),
                    nf.is_zero(),
                    format!("normal form {}", nf.to_text()),
                ));
            }
            Ok(Outcome {
                payload: json!({ "equal": report.equal, "kernel_generators": kernel }),
                certificates,
                text: vec![format!(
                    "elimination kernel equals the relation ideal: {}",
                    report.equal
                )],
            })
        }
        Command::Embdim { curve, .. } => {
            let cfg = parse_config(field, curve)?;
            let report = embedding_dimension(&relation_set(&cfg))?;
            Ok(Outcome {
                payload: json!({
                    "embdim": report.embdim,
                    "minimal_variables": report.minimal_vars,
                    "full_variables": report.full_vars,
                    "jacobian_rank": report.jacobian_rank,
                }),
                certificates: report.entries,
                text: vec![format!("{}", report.embdim)],
            })
        }
        Command::MinimalPresentation { curve, .. } => {
            let cfg = parse_config(field, curve)?;
            let presentation = minimal_presentation(&relation_set(&cfg));
            let vars: Vec<String> = presentation.roster().names().to_vec();
            let relations: Vec<String> = presentation.gens().iter().map(|p| p.to_text()).collect();
            let mut text = vec![format!("variables: {}", vars.join(", "))];
            text.extend(relations.iter().map(|r| format!("relation: {r}")));
            Ok(Outcome {
                payload: json!({ "variables": vars, "relations": relations }),
                certificates: vec![],
                text,
            })
        }
        Command::Singularity { r, j, truncation, .. } => {
            if *r > 2 {
                return Err(Failure::Usage("--r must be 0, 1 or 2".into()));
            }
            if *truncation < 8 {
                return Err(Failure::Usage("--truncation must be at least 8".into()));
            }
            let j = match j {
                None => (0..*r).map(|_| field.one()).collect(),
                Some(text) => text
                    .split(',')
                    .map(|s| FieldElem::parse(field, s.trim()))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let report = verify_normal_form(field, *r, j, *truncation)?;
            Ok(Outcome {
                payload: json!({
                    "ordinary_factors": report.ordinary_factors,
                    "truncation": report.truncation,
                    "normal_form": report.normal_form,
                    "unit_factor": report.unit_factor,
                }),
                certificates: report.entries,
                text: vec![format!("normal form: {}", report.normal_form)],
            })
        }
        Command::FormalGroups { dim, torsion, .. } => {
            if *dim < 1 {
                return Err(Failure::Usage("--dim must be at least 1".into()));
            }
            let decompositions = enumerate_decompositions(*dim);
            let items: Vec<Value> = decompositions
                .iter()
                .map(|d| {
                    json!({
                        "g10": d.g10,
                        "g11": d.g11,
                        "pairs": d.pairs,
                        "label": d.label(),
                        "iso_class_ambiguous": d.iso_class_ambiguous(),
                    })
                })
                .collect();
            let mut text: Vec<String> = decompositions.iter().map(|d| d.label()).collect();
            let mut payload = json!({ "dim": dim, "count": items.len(), "decompositions": items });
            if let Some(rank) = torsion {
                let forced = decomposition_from_torsion(*dim, *rank)
                    .map_err(|e| Failure::Usage(e.to_string()))?;
                text.push(format!("torsion 2^{rank}: {}", forced.label()));
                payload["torsion_classification"] = json!({
                    "rank": rank,
                    "label": forced.label(),
                    "iso_class_ambiguous": forced.iso_class_ambiguous(),
                });
            }
            Ok(Outcome {
                payload,
                certificates: vec![],
                text,
            })
        }
        Command::VerifyShioda { .. } => {
            let report = shioda_parametrization_check(field)?;
            Ok(Outcome {
                payload: json!({ "parametrizes": report.ok }),
                certificates: report.entries,
                text: vec!["rational parametrization of the superspecial Kummer surface".into()],
            })
        }
        Command::VerifyThreefold { common } => {
            let report = function_field_identities(field, &make_limits(common))?;
            Ok(Outcome {
                payload: json!({ "identities_hold": report.ok }),
                certificates: report.entries,
                text: vec!["superspecial threefold function-field identities".into()],
            })
        }
        Command::VerifyLemmaPhi { .. } => {
            let report = lemma_phi_check(field)?;
            Ok(Outcome {
                payload: json!({ "identities_hold": report.ok }),
                certificates: report.entries,
                text: vec!["two-generator chart identities".into()],
            })
        }
        Command::Invariants {
            curve,
            degree,
            free,
            common,
        } => {
            let cfg = parse_config(field, curve)?;
            let (mut quotient, action) = curve_presentation(&cfg);
            let basis = if *free {
                invariant_basis_bounded(&action, None, *degree)
            } else {
                let gb = quotient.groebner(&MonomialOrder::GrevLex, &make_limits(common))?;
                invariant_basis_bounded(&action, Some(gb), *degree)
            };
            let texts: Vec<String> = basis.iter().map(|p| p.to_text()).collect();
            Ok(Outcome {
                payload: json!({ "degree": degree, "dimension": texts.len(), "basis": texts }),
                certificates: vec![],
                text: texts,
            })
        }
        Command::CheckSurjectivity {
            e,
            degree,
            counterexample,
            common,
        } => {
            let limits = make_limits(common);
            let (mut quotient, action) = if *counterexample {
                swap_counterexample(field)?
            } else {
                let e_text = e
                    .as_ref()
                    .ok_or_else(|| Failure::Usage("--e is required without --counterexample".into()))?;
                let exponents: Vec<u16> = e_text
                    .split(',')
                    .map(|s| s.trim().parse::<u16>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|err| Failure::Usage(format!("bad --e: {err}")))?;
                if exponents.is_empty() || exponents.contains(&0) {
                    return Err(Failure::Usage("--e needs positive exponents".into()));
                }
                let p = field.characteristic();
                if p > u32::MAX as u64 {
                    return Err(Failure::Usage("characteristic too large for a group order".into()));
                }
                shift_model(field, p as u32, &exponents, None)?
            };
            let report = check_quotient_surjectivity(&action, &mut quotient, *degree, &limits)?;
            let witnesses: Vec<String> = report.witnesses.iter().map(|w| w.to_text()).collect();
            let cert = entry(
                format!("surjective up to degree {}", report.degree),
                report.surjective_up_to_d,
                if witnesses.is_empty() {
                    "no witnesses".to_string()
                } else {
                    format!("witness classes: {}", witnesses.join(", "))
                },
            );
            Ok(Outcome {
                payload: json!({
                    "degree": report.degree,
                    "dim_quotient_invariants": report.dim_quotient_invariants,
                    "dim_image": report.dim_image,
                    "surjective": report.surjective_up_to_d,
                    "witnesses": witnesses,
                }),
                certificates: vec![cert],
                text: vec![],
            })
        }
    }
}

/// `F2[X,Y]/(X+Y)` with the swap action: the classic failure of quotient
/// compatibility, included as the exit-1 demonstration path.
fn swap_counterexample(
    field: &Arc<FieldDesc>,
) -> Result<(QuotientPresentation, CyclicAction), Failure> {
    if field.characteristic() != 2 {
        return Err(Failure::Usage("the counterexample lives in characteristic 2".into()));
    }
    let roster = VarRoster::new(vec!["X", "Y"]);
    let x = MultiPoly::var(&roster, field, 0);
    let y = MultiPoly::var(&roster, field, 1);
    let action = CyclicAction::new(&roster, 2, vec![y.clone(), x.clone()])?;
    let quotient = QuotientPresentation::new(&roster, field, vec![x.add(&y)]);
    Ok((quotient, action))
}
