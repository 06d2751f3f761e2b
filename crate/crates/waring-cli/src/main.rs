//! Command-line front end: parse forms, run decomposition / rank /
//! classification, verify user decompositions, run sampling experiments and
//! region grids. Results are JSON on stdout (or a file); grids can also be
//! CSV. Identical arguments and seed give byte-identical output.
//!
//! Exit codes: 0 success, 2 parse error, 3 degenerate parameters or
//! exhausted budget, 4 internal invariant violation.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Read;
use std::process::ExitCode;

use waring::decompose::{decompose_any, NodeChoice};
use waring::forms::{BinaryForm, VerifyOutcome};
use waring::io::{
    decomposition_json, form_json, object, parse_decomposition, parse_form, rat_json,
};
use waring::rank::{complex_rank, real_rank, SearchBudget};
use waring::sample::{sample_ranks, Distribution};
use waring::scalar::{parse_rat, to_rational_string, Rat};
use waring::strata::{
    canonical5_parameters, classify_canonical5, classify_deg3, classify_deg4, grid_to_csv,
    region_grid, ConstantsSet, GridFamily, LabelSource, StratumLabel,
};

#[derive(Parser)]
#[command(
    name = "waring",
    version,
    about = "Exact Waring decompositions and real rank of binary forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// RNG seed (default: WARING_SEED env var, else 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Random mu samples per search stage
    #[arg(long, default_value_t = 2048)]
    budget: usize,
    /// Residual certificate tolerance (rational or decimal string)
    #[arg(long, default_value = "1/1000000000000000000000000000000")]
    tol: String,
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Some real Waring decomposition of length <= degree
    DecomposeAny {
        /// Form, as inline JSON or a path to a JSON file
        #[arg(long)]
        form: String,
        /// Explicit node parameters (odd d: "s1,s2,..."; even d: "s,s1,...")
        #[arg(long)]
        nodes: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Real rank, complex rank, and a minimal decomposition
    Rank {
        #[arg(long)]
        form: String,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form stratum classification (degree 3, 4, or the canonical
    /// degree-5 family)
    Classify {
        #[arg(long)]
        form: Option<String>,
        /// Canonical-family parameter a (with --b)
        #[arg(long)]
        a: Option<String>,
        /// Canonical-family parameter b (with --a)
        #[arg(long)]
        b: Option<String>,
        /// Degree-4 constants set: verbatim | corrected
        #[arg(long, default_value = "corrected")]
        set: String,
        #[command(flatten)]
        common: Common,
    },
    /// Residual report for a user-supplied decomposition
    Verify {
        #[arg(long)]
        form: String,
        /// Decomposition, as inline JSON or a path
        #[arg(long)]
        decomposition: String,
        /// Compare up to a global scale
        #[arg(long)]
        projective: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Rank histogram over random forms
    Sample {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        n: usize,
        /// integer-box | unit-sphere
        #[arg(long, default_value = "integer-box")]
        distribution: String,
        #[command(flatten)]
        common: Common,
    },
    /// Region grid over a two-parameter family
    Grid {
        /// canonical5-f | canonical5-F | deg3-slice | deg4-slice
        #[arg(long)]
        family: String,
        /// x0,x1,y0,y1
        #[arg(long)]
        window: String,
        /// nx,ny
        #[arg(long)]
        steps: String,
        /// Fixed trailing coefficients for the slices ("c3" or "c3,c4")
        #[arg(long)]
        fixed: Option<String>,
        /// csv | json
        #[arg(long, default_value = "csv")]
        format: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Degenerate(String),
    Internal(String),
}

impl From<waring::Error> for CliError {
    fn from(e: waring::Error) -> Self {
        match e {
            waring::Error::DegenerateParameters(m) => CliError::Degenerate(m),
            waring::Error::Internal(m) => CliError::Internal(m),
            other => CliError::Parse(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Degenerate(m)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(
                    &json!({"error": "degenerate-parameters", "detail": m})
                )
                .unwrap()
            );
            ExitCode::from(3)
        }
        Err(CliError::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(4)
        }
    }
}

fn seed_of(c: &Common) -> u64 {
    c.seed.unwrap_or_else(|| {
        std::env::var("WARING_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    })
}

fn budget_of(c: &Common) -> CliResult<SearchBudget> {
    let tol = parse_rat(&c.tol).ok_or_else(|| CliError::Parse("unreadable --tol".into()))?;
    if tol <= Rat::new(0.into(), 1.into()) {
        return Err(CliError::Parse("tolerance must be positive".into()));
    }
    Ok(SearchBudget {
        mu_samples: c.budget,
        seed: seed_of(c),
        tolerance: tol,
    })
}

fn load_json(spec: &str) -> CliResult<Value> {
    let text = if spec.trim_start().starts_with(['{', '[']) {
        spec.to_string()
    } else if spec == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(spec).map_err(|e| CliError::Parse(format!("{spec}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))
}

fn load_form(spec: &str) -> CliResult<BinaryForm> {
    Ok(parse_form(&load_json(spec)?)?)
}

fn emit(common: &Common, value: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    write_out(common.out.as_deref(), &text)
}

fn write_out(path: Option<&str>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Parse(format!("{p}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn label_json(label: &StratumLabel, extra: Vec<(&str, Value)>) -> Value {
    let mut entries = vec![
        ("rank", json!(label.rank)),
        (
            "source",
            json!(match label.source {
                LabelSource::ClosedForm => "closed-form",
                LabelSource::Algorithm2 => "algorithm-2",
                LabelSource::SubsetOnly => "subset-only",
            }),
        ),
        ("conditions_fired", json!(label.conditions_fired)),
    ];
    entries.extend(extra);
    object(entries)
}

fn outcome_json(out: &VerifyOutcome) -> Value {
    match out {
        VerifyOutcome::Exact => json!({"status": "exact", "residual": "0"}),
        VerifyOutcome::Certified(b) => json!({
            "status": "certified",
            "residual_bound": waring::scalar::to_decimal_string(b, 20),
        }),
        VerifyOutcome::Failed(b) => json!({
            "status": "failed",
            "residual_bound": waring::scalar::to_decimal_string(b, 20),
        }),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::DecomposeAny {
            form,
            nodes,
            common,
        } => {
            let p = load_form(&form)?;
            let choice = match nodes {
                Some(list) => {
                    let values: Result<Vec<Rat>, ()> = list
                        .split(',')
                        .map(|s| parse_rat(s.trim()).ok_or(()))
                        .collect();
                    let values =
                        values.map_err(|_| CliError::Parse("unreadable --nodes".into()))?;
                    Some(NodeChoice::from_values(p.degree(), &values)?)
                }
                None => None,
            };
            let (dec, info) = decompose_any(&p, choice, seed_of(&common))?;
            let verified = waring::forms::verify(&dec, &p, &budget_of(&common)?.tolerance, false)?;
            let mut nodes_out: Vec<Value> = info
                .nodes
                .iter()
                .map(|n| json!(to_rational_string(n)))
                .collect();
            if info.r_node.is_none() && !info.nodes.is_empty() {
                nodes_out.push(json!("infinity"));
            }
            emit(
                &common,
                &object(vec![
                    ("command", json!("decompose-any")),
                    ("form", form_json(&p)),
                    ("length", json!(dec.len())),
                    ("nodes", Value::Array(nodes_out)),
                    ("r_node", info.r_node.map_or(Value::Null, |r| rat_json(&r))),
                    ("retries", json!(info.retries)),
                    ("decomposition", decomposition_json(&dec)),
                    ("verified", outcome_json(&verified)),
                ]),
            )
        }
        Command::Rank { form, common } => {
            let p = load_form(&form)?;
            let budget = budget_of(&common)?;
            let mut cert = real_rank(&p, &budget)?;
            let (cr, cr_complete) = complex_rank(&p, &budget)?;
            cert.complex_rank = Some(cr);
            let stages: Vec<Value> = cert
                .stages
                .iter()
                .map(|s| json!({"r": s.r, "delta": s.delta, "exact": s.exact}))
                .collect();
            let witness = cert.witness.as_ref().map_or(Value::Null, |w| {
                object(vec![
                    (
                        "mu",
                        json!(w.mu.iter().map(to_rational_string).collect::<Vec<_>>()),
                    ),
                    (
                        "kernel_vector",
                        json!(w.q.iter().map(to_rational_string).collect::<Vec<_>>()),
                    ),
                    (
                        "bezoutian_minors",
                        json!(w.minors.iter().map(to_rational_string).collect::<Vec<_>>()),
                    ),
                ])
            });
            emit(
                &common,
                &object(vec![
                    ("command", json!("rank")),
                    ("form", form_json(&p)),
                    ("real_rank", json!(cert.rank)),
                    ("complex_rank", json!(cr)),
                    ("complex_search_complete", json!(cr_complete)),
                    ("search_complete", json!(cert.search_complete)),
                    ("stages", Value::Array(stages)),
                    ("witness", witness),
                    ("decomposition", decomposition_json(&cert.decomposition)),
                    ("residual", outcome_json(&cert.residual)),
                ]),
            )
        }
        Command::Classify {
            form,
            a,
            b,
            set,
            common,
        } => {
            let set = match set.as_str() {
                "verbatim" => ConstantsSet::Verbatim,
                "corrected" => ConstantsSet::Corrected,
                other => {
                    return Err(CliError::Parse(format!("unknown constants set `{other}`")))
                }
            };
            let budget = budget_of(&common)?;
            let value = match (form, a, b) {
                (None, Some(a), Some(b)) => {
                    let a =
                        parse_rat(&a).ok_or_else(|| CliError::Parse("unreadable --a".into()))?;
                    let b =
                        parse_rat(&b).ok_or_else(|| CliError::Parse("unreadable --b".into()))?;
                    let label = classify_canonical5(&a, &b, &budget)?;
                    label_json(
                        &label,
                        vec![
                            ("family", json!("canonical5")),
                            ("a", rat_json(&a)),
                            ("b", rat_json(&b)),
                        ],
                    )
                }
                (Some(form), None, None) => {
                    let p = load_form(&form)?;
                    match p.degree() {
                        3 => label_json(&classify_deg3(p.coeffs())?, vec![("form", form_json(&p))]),
                        4 => label_json(
                            &classify_deg4(p.coeffs(), set)?,
                            vec![
                                ("form", form_json(&p)),
                                (
                                    "constants_set",
                                    json!(match set {
                                        ConstantsSet::Verbatim => "verbatim",
                                        ConstantsSet::Corrected => "corrected",
                                    }),
                                ),
                            ],
                        ),
                        5 => {
                            let (a, b) = canonical5_parameters(&p).ok_or_else(|| {
                                CliError::Parse(
                                    "degree-5 classification covers only the canonical family x(x^2-y^2)(x^2+2axy+by^2)"
                                        .into(),
                                )
                            })?;
                            let label = classify_canonical5(&a, &b, &budget)?;
                            label_json(
                                &label,
                                vec![
                                    ("family", json!("canonical5")),
                                    ("a", rat_json(&a)),
                                    ("b", rat_json(&b)),
                                ],
                            )
                        }
                        d => {
                            return Err(CliError::Parse(format!(
                                "no closed-form classifier for degree {d}"
                            )))
                        }
                    }
                }
                _ => {
                    return Err(CliError::Parse(
                        "classify needs either --form or both --a and --b".into(),
                    ))
                }
            };
            emit(&common, &value)
        }
        Command::Verify {
            form,
            decomposition,
            projective,
            common,
        } => {
            let p = load_form(&form)?;
            let dec = parse_decomposition(&load_json(&decomposition)?)?;
            let tol = budget_of(&common)?.tolerance;
            let out = waring::forms::verify(&dec, &p, &tol, projective)?;
            emit(
                &common,
                &object(vec![
                    ("command", json!("verify")),
                    ("form", form_json(&p)),
                    ("length", json!(dec.len())),
                    ("projective", json!(projective)),
                    ("pairwise_independent", json!(dec.pairwise_independent())),
                    ("result", outcome_json(&out)),
                ]),
            )
        }
        Command::Sample {
            degree,
            n,
            distribution,
            common,
        } => {
            if degree < 2 || n < 1 {
                return Err(CliError::Parse("need degree >= 2 and n >= 1".into()));
            }
            let dist = match distribution.as_str() {
                "integer-box" => Distribution::IntegerBox,
                "unit-sphere" => Distribution::UnitSphere,
                other => return Err(CliError::Parse(format!("unknown distribution `{other}`"))),
            };
            let budget = budget_of(&common)?;
            let hist = sample_ranks(degree, n, seed_of(&common), dist, &budget)?;
            let mut counts = serde_json::Map::new();
            for (k, v) in &hist.counts {
                counts.insert(k.to_string(), json!(v));
            }
            emit(
                &common,
                &object(vec![
                    ("command", json!("sample")),
                    ("degree", json!(degree)),
                    ("n", json!(n)),
                    ("seed", json!(seed_of(&common))),
                    ("distribution", json!(distribution)),
                    ("histogram", Value::Object(counts)),
                    ("incomplete_certificates", json!(hist.incomplete)),
                ]),
            )
        }
        Command::Grid {
            family,
            window,
            steps,
            fixed,
            format,
            common,
        } => {
            let nums: Result<Vec<Rat>, ()> = window
                .split(',')
                .map(|s| parse_rat(s.trim()).ok_or(()))
                .collect();
            let nums = nums.map_err(|_| CliError::Parse("unreadable --window".into()))?;
            if nums.len() != 4 {
                return Err(CliError::Parse("--window needs x0,x1,y0,y1".into()));
            }
            let st: Result<Vec<usize>, _> = steps.split(',').map(|s| s.trim().parse()).collect();
            let st = st.map_err(|_| CliError::Parse("unreadable --steps".into()))?;
            if st.len() != 2 {
                return Err(CliError::Parse("--steps needs nx,ny".into()));
            }
            let fixed_vals: Vec<Rat> = match fixed {
                Some(f) => f
                    .split(',')
                    .map(|s| parse_rat(s.trim()))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| CliError::Parse("unreadable --fixed".into()))?,
                None => vec![],
            };
            let zero = || Rat::new(0.into(), 1.into());
            let fam = match family.as_str() {
                "canonical5-f" => GridFamily::Canonical5Signs,
                "canonical5-F" => GridFamily::Canonical5Full,
                "deg3-slice" => GridFamily::Deg3Slice {
                    c3: fixed_vals.first().cloned().unwrap_or_else(zero),
                },
                "deg4-slice" => GridFamily::Deg4Slice {
                    c3: fixed_vals.first().cloned().unwrap_or_else(zero),
                    c4: fixed_vals.get(1).cloned().unwrap_or_else(zero),
                },
                other => return Err(CliError::Parse(format!("unknown family `{other}`"))),
            };
            let budget = budget_of(&common)?;
            let records = region_grid(
                &fam,
                (&nums[0], &nums[1], &nums[2], &nums[3]),
                (st[0], st[1]),
                &budget,
            )?;
            match format.as_str() {
                "csv" => write_out(common.out.as_deref(), &grid_to_csv(&fam, &records)),
                "json" => {
                    let recs: Vec<Value> = records
                        .iter()
                        .map(|r| {
                            json!({
                                "x": to_rational_string(&r.x),
                                "y": to_rational_string(&r.y),
                                "f_sign": r.f_sign,
                                "F_sign": r.big_f_sign,
                                "label": r.label,
                            })
                        })
                        .collect();
                    emit(&common, &Value::Array(recs))
                }
                other => Err(CliError::Parse(format!("unknown format `{other}`"))),
            }
        }
    }
}
