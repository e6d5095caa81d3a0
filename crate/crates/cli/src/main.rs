//! `qchar`: q-series, quasi-particle bases and characters of `sl(n+1)^`
//! standard modules from the command line.

mod config;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qchar_core::fermionic::{parafermionic_sum, principal_sum, prop01_sum};
use qchar_core::lattice::LatticeContext;
use qchar_core::oracle::{cache_path, CacheOutcome};
use qchar_core::qpbasis::{
    enumerate_basis, parse_charge_type, parse_color_type, render_table, table_rows, CensusFilter, TableStyle,
};
use qchar_core::rational::{ceil_int, format_rational, parse_rational};
use qchar_core::theta::{assemble_character, special_character_l1l2, string_function_from_sum, theta_series};
use qchar_core::verify::{reference_table_check, run_suites, SuiteParams};
use qchar_core::{
    AdmissibilityContext, DominantWeight, GradedCharacter, Grading, HighestWeight, MultTable, QSeries, Rational,
    Search, WeightVec,
};

const SUBCOMMANDS: &[&str] = &[
    "fermionic",
    "parafermionic",
    "enumerate",
    "table",
    "theta",
    "character",
    "string",
    "oracle-build",
    "prop01",
    "special-l1l2",
    "verify",
];

#[derive(Parser, Debug)]
#[command(
    name = "qchar",
    version,
    about = "Characters of sl(n+1)^ standard modules",
    args_override_self = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Oracle cache directory (default: $QCHAR_CACHE_DIR, then the user cache dir).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Enumerate with a doubled search radius.
    #[arg(long, global = true)]
    doubled: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GradingArg {
    Principal,
    Parafermionic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StyleArg {
    Auto,
    Plain,
    ChargeType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Fermionic,
    Oracle,
    Both,
}

#[derive(Args, Debug, Clone)]
struct Module {
    /// Rank of sl(n+1).
    #[arg(long)]
    n: usize,
    /// Level; optional when --weight is given.
    #[arg(long)]
    k: Option<usize>,
    /// Highest weight "k0*L0+kj*Lj" (default k*L0).
    #[arg(long)]
    weight: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Principal-subspace fermionic sum.
    Fermionic {
        #[command(flatten)]
        module: Module,
        #[arg(long, value_parser = parse_order)]
        order: Rational,
        /// Charge bound K (default: the level of the weight used).
        #[arg(long)]
        charges: Option<usize>,
        /// Use the dotted weight.
        #[arg(long)]
        dotted: bool,
    },
    /// Parafermionic fermionic sum, optionally restricted to a weight class.
    Parafermionic {
        #[command(flatten)]
        module: Module,
        #[arg(long, value_parser = parse_order)]
        order: Rational,
        /// Simple-root coordinates "c1,…,cn" of μ-Λ.
        #[arg(long)]
        mu: Option<String>,
    },
    /// Census of the quasi-particle basis.
    Enumerate {
        #[command(flatten)]
        module: Module,
        #[arg(long, value_parser = parse_order)]
        max_energy: Rational,
        #[arg(long, value_enum, default_value_t = GradingArg::Parafermionic)]
        grading: GradingArg,
        /// Charge bound K (default k-1).
        #[arg(long)]
        charges: Option<usize>,
        /// Color type "r_n;…;r_1".
        #[arg(long)]
        color_type: Option<String>,
        /// Charge type "c,c;…;c", colors n down to 1.
        #[arg(long)]
        charge_type: Option<String>,
        /// Weight class: simple-root coordinates of μ-Λ, read mod k.
        #[arg(long)]
        mu: Option<String>,
        /// List the monomials.
        #[arg(long)]
        list: bool,
    },
    /// Basis table grouped by color type and energy.
    Table {
        #[command(flatten)]
        module: Module,
        #[arg(long, value_parser = parse_order)]
        max_energy: Rational,
        #[arg(long)]
        color_type: Option<String>,
        #[arg(long, value_enum, default_value_t = StyleArg::Auto)]
        style: StyleArg,
    },
    /// Theta function of the class of μ.
    Theta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Dynkin labels of μ.
        #[arg(long)]
        mu: String,
        #[arg(long, value_parser = parse_order)]
        order: Rational,
        #[arg(long)]
        resolved: bool,
    },
    /// Full character assembled from fermionic sums and theta functions.
    Character {
        #[command(flatten)]
        module: Module,
        #[arg(long, value_parser = parse_order)]
        order: Rational,
        #[arg(long)]
        resolved: bool,
    },
    /// String function c_μ from the fermionic formula and/or the oracle.
    String {
        #[command(flatten)]
        module: Module,
        /// Simple-root coordinates "c1,…,cn" of μ-Λ.
        #[arg(long)]
        mu: String,
        /// Depth bound.
        #[arg(long, value_parser = parse_order)]
        order: Rational,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Build (or load) the weight-multiplicity table.
    OracleBuild {
        #[arg(long)]
        n: usize,
        /// Any dominant weight "l0*L0+l1*L1+…".
        #[arg(long)]
        weight: String,
        #[arg(long, alias = "order")]
        depth: usize,
    },
    /// Vacuum character from particles and antiparticles.
    Prop01 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_order)]
        order: Rational,
    },
    /// Parafermionic trace of L1+L2 for n = k = 2.
    SpecialL1l2 {
        #[arg(long, value_parser = parse_order)]
        order: Rational,
    },
    /// Run verification suites.
    Verify {
        /// Suite names, repeatable or comma separated; "all" runs every suite.
        #[arg(long = "suite", value_delimiter = ',', default_value = "all")]
        suites: Vec<String>,
        #[arg(long, value_parser = parse_order)]
        order: Option<Rational>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        weight: Option<String>,
    },
}

fn parse_order(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn parse_ints(text: &str, n: usize, what: &str) -> Result<Vec<i64>, String> {
    let values: Result<Vec<i64>, _> = text
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect();
    match values {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(format!("{what} must be {n} comma-separated integers, got {text:?}")),
    }
}

impl Module {
    fn highest_weight(&self) -> Result<HighestWeight, String> {
        let hw = match (&self.weight, self.k) {
            (Some(spec), _) => HighestWeight::parse(self.n, spec).map_err(|e| e.to_string())?,
            (None, Some(k)) => HighestWeight::vacuum(self.n, k).map_err(|e| e.to_string())?,
            (None, None) => return Err("either --k or --weight is required".into()),
        };
        if let Some(k) = self.k {
            if k != hw.level() {
                return Err(format!("--k {k} does not match the level {} of the weight", hw.level()));
            }
        }
        Ok(hw)
    }

    fn describe(&self, hw: &HighestWeight) -> String {
        format!("n={} k={} weight={}", hw.n(), hw.level(), DominantWeight::from(hw))
    }
}

/// `Λ + Σ c_i α_i`.
fn weight_from_offset(hw: &HighestWeight, text: &str) -> Result<(Vec<i64>, WeightVec), String> {
    let coords = parse_ints(text, hw.n(), "--mu")?;
    let ctx = LatticeContext::new(hw.n()).map_err(|e| e.to_string())?;
    let mu = hw.finite_weight().add(&ctx.from_root_coords(&coords));
    Ok((coords, mu))
}

fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os("QCHAR_CACHE_DIR").filter(|d| !d.is_empty()) {
        return PathBuf::from(dir);
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return PathBuf::from(dir).join("qchar");
    }
    match std::env::var_os("HOME").filter(|d| !d.is_empty()) {
        Some(home) => PathBuf::from(home).join(".cache").join("qchar"),
        None => PathBuf::from(".qchar-cache"),
    }
}

/// What a command prints, and whether its checks held.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, ok: true }
    }
}

fn series_outcome(header: String, series: &QSeries, params: Value) -> Outcome {
    Outcome::ok(
        format!(
            "# {header} order={}\n{}",
            format_rational(&series.order()),
            series.to_text()
        ),
        json!({ "params": params, "series": series.to_json_value() }),
    )
}

fn character_outcome(header: String, ch: &GradedCharacter, params: Value) -> Outcome {
    Outcome::ok(
        format!("# {header} order={}\n{}", format_rational(&ch.order()), ch.to_text()),
        json!({ "params": params, "character": ch.to_json_value() }),
    )
}

fn module_params(hw: &HighestWeight) -> Value {
    json!({ "n": hw.n(), "k": hw.level(), "weight": DominantWeight::from(hw).to_string() })
}

fn with(mut base: Value, key: &str, value: Value) -> Value {
    base.as_object_mut()
        .expect("params are objects")
        .insert(key.into(), value);
    base
}

fn table_for(hw: &HighestWeight, depth: usize, cache_dir: &std::path::Path) -> Result<MultTable, String> {
    let weight = DominantWeight::from(hw);
    let (table, outcome) = MultTable::load_or_build(&weight, depth, cache_dir).map_err(|e| e.to_string())?;
    report_cache(&weight, depth, cache_dir, outcome);
    Ok(table)
}

fn report_cache(weight: &DominantWeight, depth: usize, dir: &std::path::Path, outcome: CacheOutcome) {
    let status = match outcome {
        CacheOutcome::Hit => "cache hit",
        CacheOutcome::Built => "built",
        CacheOutcome::Rebuilt => "rebuilt (stale cache)",
    };
    eprintln!(
        "oracle {weight} depth {depth}: {status} {}",
        cache_path(dir, weight, depth).display()
    );
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let search = if cli.doubled { Search::Doubled } else { Search::Tight };
    let cache_dir = cli.cache_dir.clone().unwrap_or_else(default_cache_dir);
    match cli.command {
        Command::Fermionic {
            module,
            order,
            charges,
            dotted,
        } => {
            let hw = module.highest_weight()?;
            let used = if dotted {
                hw.dotted().map_err(|e| e.to_string())?
            } else {
                hw.clone()
            };
            let charges = charges.unwrap_or(used.level());
            let series = principal_sum(&used, charges, order, search).map_err(|e| e.to_string())?;
            let params = with(
                with(module_params(&hw), "charges", charges.into()),
                "dotted",
                dotted.into(),
            );
            Ok(series_outcome(
                format!("fermionic {} charges={charges} dotted={dotted}", module.describe(&hw)),
                &series,
                params,
            ))
        }
        Command::Parafermionic { module, order, mu } => {
            let hw = module.highest_weight()?;
            let restriction = mu.as_deref().map(|m| weight_from_offset(&hw, m)).transpose()?;
            let series =
                parafermionic_sum(&hw, order, restriction.as_ref().map(|r| &r.1), search).map_err(|e| e.to_string())?;
            let class = restriction.as_ref().map(|r| r.0.clone());
            let label = class.as_ref().map_or("all".to_string(), |c| format!("{c:?}"));
            Ok(series_outcome(
                format!("parafermionic {} class={label}", module.describe(&hw)),
                &series,
                with(module_params(&hw), "mu", json!(class)),
            ))
        }
        Command::Enumerate {
            module,
            max_energy,
            grading,
            charges,
            color_type,
            charge_type,
            mu,
            list,
        } => {
            let hw = module.highest_weight()?;
            let k = hw.level() as i64;
            let n = hw.n();
            let charges = charges.unwrap_or(hw.level().saturating_sub(1));
            let ctx = AdmissibilityContext::with_charges(hw.clone(), charges).map_err(|e| e.to_string())?;
            let filter = CensusFilter {
                color_type: color_type
                    .as_deref()
                    .map(|t| parse_color_type(t, n))
                    .transpose()
                    .map_err(|e| e.to_string())?,
                charge_type: charge_type
                    .as_deref()
                    .map(|t| parse_charge_type(t, n, charges))
                    .transpose()
                    .map_err(|e| e.to_string())?,
                weight_class: mu
                    .as_deref()
                    .map(|m| parse_ints(m, n, "--mu").map(|c| c.iter().map(|x| x.rem_euclid(k)).collect()))
                    .transpose()?,
            };
            let grading = match grading {
                GradingArg::Principal => Grading::Principal,
                GradingArg::Parafermionic => Grading::Parafermionic,
            };
            let census =
                enumerate_basis(&ctx, max_energy, grading, &filter, list, search).map_err(|e| e.to_string())?;
            let grading_name = match grading {
                Grading::Principal => "principal",
                Grading::Parafermionic => "parafermionic",
            };
            let mut text = format!(
                "# enumerate {} charges={charges} grading={grading_name} max-energy={}\n",
                module.describe(&hw),
                format_rational(&max_energy)
            );
            for (grade, count) in &census.counts {
                text.push_str(&format!("{} {count}\n", format_rational(grade)));
                for gm in census.monomials.iter().flatten().filter(|gm| gm.grade == *grade) {
                    text.push_str(&format!("  {}\n", gm.monomial));
                }
            }
            text.push_str(&format!("total {}\n", census.total()));
            let params = with(
                with(
                    with(module_params(&hw), "charges", charges.into()),
                    "grading",
                    grading_name.into(),
                ),
                "max_energy",
                format_rational(&max_energy).into(),
            );
            Ok(Outcome::ok(
                text,
                json!({ "params": params, "total": census.total(), "census": census.to_json_value() }),
            ))
        }
        Command::Table {
            module,
            max_energy,
            color_type,
            style,
        } => {
            let hw = module.highest_weight()?;
            let ctx = AdmissibilityContext::new(hw.clone()).map_err(|e| e.to_string())?;
            let filter = CensusFilter {
                color_type: color_type
                    .as_deref()
                    .map(|t| parse_color_type(t, hw.n()))
                    .transpose()
                    .map_err(|e| e.to_string())?,
                ..CensusFilter::default()
            };
            let style = match style {
                StyleArg::Plain => TableStyle::Plain,
                StyleArg::ChargeType => TableStyle::WithChargeType,
                StyleArg::Auto if hw.level() >= 3 => TableStyle::WithChargeType,
                StyleArg::Auto => TableStyle::Plain,
            };
            let census = enumerate_basis(&ctx, max_energy, Grading::Parafermionic, &filter, true, search)
                .map_err(|e| e.to_string())?;
            let mut text = format!(
                "# table {} max-energy={}\n{}",
                module.describe(&hw),
                format_rational(&max_energy),
                render_table(&census, style)
            );
            let reference = if color_type.is_none() {
                reference_table_check(&hw)
            } else {
                None
            };
            let mut ok = true;
            if let Some(report) = &reference {
                ok = report.passed();
                text.push_str(&format!("# reference {}\n", report.summary_line()));
                for note in &report.notes {
                    text.push_str(&format!("# note {note}\n"));
                }
            }
            let rows: Vec<Value> = table_rows(&census, style)
                .into_iter()
                .map(|row| {
                    let basis: Vec<String> = row.monomials.iter().map(ToString::to_string).collect();
                    json!({
                        "color_type": row.color_type,
                        "energy": format_rational(&row.energy),
                        "charge_type": row.charge_type,
                        "basis": basis,
                    })
                })
                .collect();
            let params = with(module_params(&hw), "max_energy", format_rational(&max_energy).into());
            Ok(Outcome {
                text,
                json: json!({ "params": params, "rows": rows, "reference": reference }),
                ok,
            })
        }
        Command::Theta {
            n,
            k,
            mu,
            order,
            resolved,
        } => {
            let labels = parse_ints(&mu, n, "--mu")?;
            let ctx = LatticeContext::new(n).map_err(|e| e.to_string())?;
            let ch = theta_series(&ctx, &WeightVec::from_ints(&labels), k, order, resolved, search)
                .map_err(|e| e.to_string())?;
            let params = json!({ "n": n, "k": k, "mu": labels, "resolved": resolved });
            Ok(character_outcome(
                format!("theta n={n} k={k} mu={labels:?} resolved={resolved}"),
                &ch,
                params,
            ))
        }
        Command::Character {
            module,
            order,
            resolved,
        } => {
            let hw = module.highest_weight()?;
            let ch = assemble_character(&hw, order, resolved, search).map_err(|e| e.to_string())?;
            Ok(character_outcome(
                format!("character {} resolved={resolved}", module.describe(&hw)),
                &ch,
                with(module_params(&hw), "resolved", resolved.into()),
            ))
        }
        Command::String {
            module,
            mu,
            order,
            method,
        } => {
            let hw = module.highest_weight()?;
            let (coords, mu) = weight_from_offset(&hw, &mu)?;
            let fermionic = match method {
                Method::Oracle => None,
                _ => Some(string_function_from_sum(&hw, &mu, order, search).map_err(|e| e.to_string())?),
            };
            let oracle = match method {
                Method::Fermionic => None,
                _ => {
                    let depth = ceil_int(&order).max(0) as usize;
                    let table = table_for(&hw, depth, &cache_dir)?;
                    Some(table.string_function(&mu, order).map_err(|e| e.to_string())?)
                }
            };
            let mut text = format!(
                "# string {} mu-offset={coords:?} depth={}\n",
                module.describe(&hw),
                format_rational(&order)
            );
            let mut json_out = serde_json::Map::new();
            json_out.insert("params".into(), with(module_params(&hw), "mu", json!(coords)));
            for (name, series) in [("fermionic", &fermionic), ("oracle", &oracle)] {
                if let Some(s) = series {
                    text.push_str(&format!("## {name}\n{}", s.to_text()));
                    json_out.insert(name.into(), s.to_json_value());
                }
            }
            let mut ok = true;
            if let (Some(f), Some(o)) = (&fermionic, &oracle) {
                let upto = f.order().min(o.order());
                let verdict = f.equal_to_order(o, upto).map_err(|e| e.to_string())?;
                ok = verdict.is_none();
                match &verdict {
                    None => text.push_str(&format!("agree to order {}\n", format_rational(&upto))),
                    Some(d) => text.push_str(&format!(
                        "disagree at q^{}: {} vs {}\n",
                        format_rational(&d.exponent),
                        d.left,
                        d.right
                    )),
                }
                json_out.insert("agree".into(), ok.into());
                json_out.insert("compared_to".into(), format_rational(&upto).into());
            }
            Ok(Outcome {
                text,
                json: Value::Object(json_out),
                ok,
            })
        }
        Command::OracleBuild { n, weight, depth } => {
            let weight = DominantWeight::parse(n, &weight).map_err(|e| e.to_string())?;
            let (table, outcome) = MultTable::load_or_build(&weight, depth, &cache_dir).map_err(|e| e.to_string())?;
            report_cache(&weight, depth, &cache_dir, outcome);
            let dims: Vec<String> = (0..=depth).map(|d| table.depth_dimension(d).to_string()).collect();
            let mut text = format!("# oracle n={n} k={} weight={weight} depth={depth}\n", weight.level());
            for (d, dim) in dims.iter().enumerate() {
                text.push_str(&format!(
                    "depth {d}: {} weights, dimension {dim}\n",
                    table.level_entries(d).len()
                ));
            }
            let json_out = json!({
                "params": { "n": n, "k": weight.level(), "weight": weight.to_string(), "depth": depth },
                "path": cache_path(&cache_dir, &weight, depth).display().to_string(),
                "dimensions": dims,
            });
            Ok(Outcome::ok(text, json_out))
        }
        Command::Prop01 { n, k, order } => {
            let series = prop01_sum(n, k, order, search).map_err(|e| e.to_string())?;
            Ok(series_outcome(
                format!("prop01 n={n} k={k}"),
                &series,
                json!({ "n": n, "k": k }),
            ))
        }
        Command::SpecialL1l2 { order } => {
            let series = special_character_l1l2(order, search).map_err(|e| e.to_string())?;
            Ok(series_outcome(
                "special-l1l2 n=2 k=2 weight=1*L1+1*L2".into(),
                &series,
                json!({}),
            ))
        }
        Command::Verify {
            suites,
            order,
            n,
            k,
            weight,
        } => {
            let params = SuiteParams { order, n, k, weight };
            let reports = run_suites(&suites, &params).map_err(|e| e.to_string())?;
            let ok = reports.iter().all(|r| r.passed());
            let mut text = String::new();
            for report in &reports {
                text.push_str(&report.summary_line());
                text.push('\n');
                for note in &report.notes {
                    text.push_str(&format!("  note: {note}\n"));
                }
                if !report.passed() {
                    text.push_str(&format!("  reproduce: {}\n", report.reproduce));
                }
            }
            let json = serde_json::to_value(&reports).map_err(|e| e.to_string())?;
            Ok(Outcome { text, json, ok })
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<OsString> = std::env::args_os().collect();
    let args = match config::expand(args, SUBCOMMANDS) {
        Ok(args) => args,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let format = cli.format;
    match run(cli) {
        Ok(outcome) => {
            match format {
                Format::Text => print!("{}", outcome.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.json).expect("output serialises")
                ),
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
