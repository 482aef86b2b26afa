use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schubert::botttower::{mu_table, sigma_table, BottTowerSpec, EpsilonMask};
use schubert::bottsamelson::BSWord;
use schubert::flagcoh::billey;
use schubert::flagk::{change_of_basis, psi};
use schubert::structconst::{product_in_basis, struct_const};
use schubert::verify::{self, Report};
use schubert::weyl::{inversion_set, longest_element};
use schubert::{CartanMatrix, Error, WeylElement, Word};

const RANDOM_LISTS: usize = 50;
const RANDOM_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "schubert", version, about = "Exact equivariant Schubert calculus on flag varieties and Bott towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Builtin Cartan type such as A3, G2 or A1xA1.
    #[arg(short = 't', long = "type", global = true)]
    cartan_type: Option<String>,
    /// JSON file {"rank": r, "matrix": [[..], ..]}.
    #[arg(short = 'C', long = "cartan-file", global = true)]
    cartan_file: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Positive roots with their coroots.
    Roots {
        #[command(flatten)]
        common: Common,
        /// Maximum root height; required outside finite type.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Length, reduced word, descents and inversions of a Weyl element.
    Weyl {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'w')]
        w: String,
    },
    /// Restriction ξ^w(v) to a fixed point.
    Billey {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'w')]
        w: String,
        #[arg(short = 'v')]
        v: String,
    },
    /// Restriction ψ^w(v) in K-theory.
    Psi {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'w')]
        w: String,
        #[arg(short = 'v')]
        v: String,
    },
    /// Structure constant p_{u,v}^w along a reduced word of w.
    Pq {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'u')]
        u: String,
        #[arg(short = 'v')]
        v: String,
        #[arg(short = 'w')]
        w: String,
    },
    /// Full expansion of ξ^u ξ^v in the Schubert basis.
    Product {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'u')]
        u: String,
        #[arg(short = 'v')]
        v: String,
        /// Dominating reduced word; defaults to a word for the longest element.
        #[arg(short = 'w')]
        w: Option<String>,
    },
    /// Cohomology basis class σ_ε restricted to every fixed point.
    BottRestrict(TowerArgs),
    /// K-theory basis class μ_ε restricted to every fixed point.
    BottK(TowerArgs),
    /// Coefficients of *[O_{X_w}] in the ψ basis.
    Basechange {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'w')]
        w: String,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        #[command(flatten)]
        common: Common,
        /// Bott–Samelson word for the δ suites.
        #[arg(short = 'w')]
        w: Option<String>,
        /// Bott list JSON file for the δ suites.
        #[arg(long = "bott-file")]
        bott_file: Option<PathBuf>,
        /// Length bound: word length for tau, l(w) for kk-vs-t, l(v), l(w) for psi-axioms.
        #[arg(long)]
        bound: Option<usize>,
    },
}

#[derive(Args)]
struct TowerArgs {
    #[command(flatten)]
    common: Common,
    /// JSON file {"N": n, "c": [[i, j, c_ij], ..]}.
    #[arg(long = "bott-file")]
    bott_file: Option<PathBuf>,
    /// Bott–Samelson word, used with a Cartan matrix instead of a list file.
    #[arg(short = 'w')]
    w: Option<String>,
    /// Basis mask as a bit string, e.g. 101.
    #[arg(short = 'e')]
    eps: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    LocalizationDelta,
    EulerDelta,
    Tau,
    WordIndependence,
    PsiAxioms,
    KkVsT,
    YangBaxter,
    DuanAtZero,
    All,
}

enum Outcome {
    Done(String),
    Checked(Vec<Report>, bool),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Outcome::Done(text)) => {
            print_line(&text);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Checked(reports, json)) => {
            let ok = reports.iter().all(Report::passed);
            if json {
                let records: Vec<Value> = reports.iter().map(report_json).collect();
                print_line(&serde_json::to_string_pretty(&records).expect("serializable"));
            } else {
                for r in &reports {
                    print_line(&r.to_string());
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn print_line(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn report_json(r: &Report) -> Value {
    json!({
        "suite": r.name,
        "passed": r.passed(),
        "checked": r.checked,
        "failures": r.failures,
        "flagged": r.flagged,
    })
}

fn cartan(common: &Common) -> schubert::Result<CartanMatrix> {
    match (&common.cartan_type, &common.cartan_file) {
        (Some(_), Some(_)) => Err(Error::Domain("give either -t or -C, not both".into())),
        (Some(name), None) => CartanMatrix::from_type_name(name),
        (None, Some(path)) => CartanMatrix::from_json(&read(path)?),
        (None, None) => Err(Error::Domain("a Cartan matrix is required (-t or -C)".into())),
    }
}

fn read(path: &PathBuf) -> schubert::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

fn word(cm: &CartanMatrix, text: &str) -> schubert::Result<Word> {
    let w: Word = text.parse()?;
    w.validate(cm)?;
    Ok(w)
}

fn element(cm: &CartanMatrix, text: &str) -> schubert::Result<WeylElement> {
    WeylElement::from_word(cm, &word(cm, text)?)
}

fn json_word(w: &WeylElement) -> String {
    w.reduced_word().to_string()
}

fn render(json: bool, value: Value, text: String) -> Outcome {
    if json {
        Outcome::Done(serde_json::to_string_pretty(&value).expect("serializable"))
    } else {
        Outcome::Done(text)
    }
}

fn run(command: Command) -> schubert::Result<Outcome> {
    match command {
        Command::Roots { common, bound } => {
            let cm = cartan(&common)?;
            let roots = match bound {
                Some(h) => cm.positive_roots_up_to_height(h),
                None => cm.positive_roots()?,
            };
            let records: Vec<Value> = roots
                .iter()
                .map(|(b, c)| json!({"root": b.to_string(), "coroot": c.to_string(), "height": b.height()}))
                .collect();
            let text: Vec<String> = roots.iter().map(|(b, c)| format!("{b}\t{c}")).collect();
            Ok(render(common.json, Value::Array(records), text.join("\n")))
        }
        Command::Weyl { common, w } => {
            let cm = cartan(&common)?;
            let w = element(&cm, &w)?;
            let descents: Vec<String> = w.right_descents().iter().map(|i| i.to_string()).collect();
            let inversions: Vec<String> = inversion_set(&w).iter().map(|b| b.to_string()).collect();
            let value = json!({
                "element": w.to_string(),
                "length": w.length(),
                "reduced_word": json_word(&w),
                "right_descents": descents,
                "inversions": inversions,
            });
            let text = format!(
                "element {w}\nlength {}\nreduced_word {}\nright_descents {}\ninversions {}",
                w.length(),
                json_word(&w),
                descents.join(","),
                inversions.join(" "),
            );
            Ok(render(common.json, value, text))
        }
        Command::Billey { common, w, v } => {
            let cm = cartan(&common)?;
            let (w, v_word) = (element(&cm, &w)?, word(&cm, &v)?);
            let p = billey(&cm, &w, &v_word)?;
            let value = json!({"w": json_word(&w), "v": v_word.to_string(), "value": p.to_string()});
            Ok(render(common.json, value, p.to_string()))
        }
        Command::Psi { common, w, v } => {
            let cm = cartan(&common)?;
            let (w, v_word) = (element(&cm, &w)?, word(&cm, &v)?);
            let c = psi(&cm, &w, &v_word)?;
            let value = json!({"w": json_word(&w), "v": v_word.to_string(), "value": c.to_string()});
            Ok(render(common.json, value, c.to_string()))
        }
        Command::Pq { common, u, v, w } => {
            let cm = cartan(&common)?;
            let (u, v, w_word) = (element(&cm, &u)?, element(&cm, &v)?, word(&cm, &w)?);
            let p = struct_const(&cm, &u, &v, &w_word)?;
            let value = json!({"w": w_word.to_string(), "p": p.to_string()});
            Ok(render(common.json, value, p.to_string()))
        }
        Command::Product { common, u, v, w } => {
            let cm = cartan(&common)?;
            let (u, v) = (element(&cm, &u)?, element(&cm, &v)?);
            let top = match w {
                Some(text) => word(&cm, &text)?,
                None => longest_element(&cm)?.reduced_word(),
            };
            let expansion = product_in_basis(&cm, &u, &v, &top)?;
            let mut ordered: Vec<(&WeylElement, _)> = expansion.iter().collect();
            ordered.sort_by_key(|(w, _)| (w.length(), w.reduced_word()));
            let records: Vec<Value> =
                ordered.iter().map(|(w, p)| json!({"w": json_word(w), "p": p.to_string()})).collect();
            let text: Vec<String> = ordered.iter().map(|(w, p)| format!("{w}: {p}")).collect();
            Ok(render(common.json, Value::Array(records), text.join("\n")))
        }
        Command::BottRestrict(args) => tower_tables(args, false),
        Command::BottK(args) => tower_tables(args, true),
        Command::Basechange { common, w } => {
            let cm = cartan(&common)?;
            let w = element(&cm, &w)?;
            let coeffs = change_of_basis(&cm, &w)?;
            let mut ordered: Vec<_> = coeffs.iter().collect();
            ordered.sort_by_key(|(v, _)| (v.length(), v.reduced_word()));
            let records: Vec<Value> =
                ordered.iter().map(|(v, b)| json!({"v": json_word(v), "b": b.to_string()})).collect();
            let text: Vec<String> = ordered.iter().map(|(v, b)| format!("{v}: {b}")).collect();
            Ok(render(common.json, Value::Array(records), text.join("\n")))
        }
        Command::Verify { suite, common, w, bott_file, bound } => {
            let reports = run_suite(suite, &common, w.as_deref(), bott_file.as_ref(), bound)?;
            Ok(Outcome::Checked(reports, common.json))
        }
    }
}

fn tower_spec(common: &Common, bott_file: Option<&PathBuf>, w: Option<&str>) -> schubert::Result<Option<BottTowerSpec>> {
    match (bott_file, w) {
        (Some(path), None) => Ok(Some(BottTowerSpec::from_json(&read(path)?)?)),
        (None, Some(text)) => {
            let cm = cartan(common)?;
            Ok(Some(BSWord::new(&cm, &word(&cm, text)?)?.induced_list()))
        }
        (Some(_), Some(_)) => Err(Error::Domain("give either --bott-file or -w, not both".into())),
        (None, None) => Ok(None),
    }
}

fn tower_tables(args: TowerArgs, k_theory: bool) -> schubert::Result<Outcome> {
    let spec = tower_spec(&args.common, args.bott_file.as_ref(), args.w.as_deref())?
        .ok_or_else(|| Error::Domain("a tower is required (--bott-file or -t/-C with -w)".into()))?;
    let eps: EpsilonMask = args.eps.parse()?;
    if eps.len() != spec.height() {
        return Err(Error::MaskLength { expected: spec.height(), found: eps.len() });
    }
    let rows: Vec<(String, String)> = if k_theory {
        mu_table(&spec, &eps)?.iter().map(|(m, c)| (m.to_string(), c.to_string())).collect()
    } else {
        sigma_table(&spec, &eps)?.iter().map(|(m, p)| (m.to_string(), p.to_string())).collect()
    };
    let records: Vec<Value> = rows.iter().map(|(m, x)| json!({"at": m, "value": x})).collect();
    let text: Vec<String> = rows.iter().map(|(m, x)| format!("{m}: {x}")).collect();
    Ok(render(args.common.json, Value::Array(records), text.join("\n")))
}

fn run_suite(
    suite: Suite,
    common: &Common,
    w: Option<&str>,
    bott_file: Option<&PathBuf>,
    bound: Option<usize>,
) -> schubert::Result<Vec<Report>> {
    let towers = || -> schubert::Result<Vec<BottTowerSpec>> {
        Ok(match tower_spec(common, bott_file, w)? {
            Some(spec) => vec![spec],
            None => verify::random_bott_lists(RANDOM_LISTS, bound.unwrap_or(5), 3, RANDOM_SEED),
        })
    };
    let mut reports = Vec::new();
    match suite {
        Suite::LocalizationDelta => {
            for spec in towers()? {
                reports.push(verify::localization_delta(&spec)?);
            }
        }
        Suite::EulerDelta => {
            for spec in towers()? {
                reports.push(verify::euler_delta(&spec)?);
            }
        }
        Suite::Tau => reports.push(verify::tau_suite(&cartan(common)?, bound.unwrap_or(6))?),
        Suite::WordIndependence => reports.push(verify::word_independence(&cartan(common)?)?),
        Suite::PsiAxioms => reports.push(verify::psi_axioms(&cartan(common)?, bound)?),
        Suite::KkVsT => reports.push(verify::kk_vs_t(&cartan(common)?, bound)?),
        Suite::YangBaxter => reports.push(verify::yang_baxter_suite(&cartan(common)?)?),
        Suite::DuanAtZero => reports.push(verify::duan_at_zero(&cartan(common)?)?),
        Suite::All => {
            let cm = cartan(common)?;
            let spec = BSWord::new(&cm, &longest_element(&cm)?.reduced_word())?.induced_list();
            reports.push(verify::localization_delta(&spec)?);
            reports.push(verify::euler_delta(&spec)?);
            reports.push(verify::tau_suite(&cm, bound.unwrap_or(6))?);
            reports.push(verify::word_independence(&cm)?);
            reports.push(verify::psi_axioms(&cm, bound)?);
            reports.push(verify::kk_vs_t(&cm, bound)?);
            reports.push(verify::yang_baxter_suite(&cm)?);
            reports.push(verify::duan_at_zero(&cm)?);
        }
    }
    Ok(reports)
}
