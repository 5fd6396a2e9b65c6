use clap::{Args, Parser, Subcommand, ValueEnum};
use git1::chamber::{atlas_report, classify_chamber, wall_arrangement, BoxBounds, Chamber};
use git1::curve::{curve_from_json, Curve, CoreKind};
use git1::polytope::{is_semistable, omega_sets, semistability_polytope, Character};
use git1::rational::{fmt_q, parse_vec, Q};
use git1::smyth::{
    check_inclusion, common_character, contract_unmarked, enumerate_m_stable, is_m_stable, is_zu_stable,
    obstruction_pair, uniform_chi_window, ChiWindow, Mode, SmythEnum,
};
use git1::{canonical_form, enumerate_curves, EnumOptions};
use git1_ff::coords::{coordinatized_from_json, is_realizable};
use git1_ff::{verify_identities, verify_random, verify_symbolic, IdentityReport};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "git1", about = "GIT stability of pointed genus-1 curves")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Output format; chambers defaults to tsv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for all random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct ChiArg {
    /// Character as comma-separated rationals, e.g. "1/2,1/2".
    #[arg(long, allow_hyphen_values = true)]
    chi: String,
}

#[derive(Subcommand)]
enum Verb {
    /// Validate a curve file and print its canonical form.
    Validate {
        #[arg(long)]
        curve: String,
    },
    /// Semistability and stability verdict at a character.
    Stability {
        #[arg(long)]
        curve: String,
        #[command(flatten)]
        chi: ChiArg,
    },
    /// Half-space description of the semistable characters.
    Polytope {
        #[arg(long)]
        curve: String,
    },
    /// All curve classes with n marks.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_core_m: Option<usize>,
        #[arg(long)]
        max_tail_components: Option<usize>,
    },
    /// Chambers of the wall arrangement with their stable classes.
    Chambers {
        #[arg(long)]
        n: usize,
        /// Extra interior points per chamber.
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Verdict of every class with n marks at one character.
    Classify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        chi: ChiArg,
    },
    /// Check that m-stable curves map to semistable points.
    Smyth {
        /// n-1, n-2 or n-3.
        #[arg(long)]
        mode: String,
        #[command(flatten)]
        chi: ChiArg,
        #[arg(long, default_value_t = 2)]
        max_unmarked: usize,
        /// Test one curve file for m-stability instead.
        #[arg(long)]
        curve: Option<String>,
    },
    /// Check the identity catalog on explicit coordinates.
    VerifyIdentities {
        /// fold or ngon; ignored with --curve.
        #[arg(long)]
        core: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 50)]
        draws: usize,
        /// Skip the symbolic run (on by default for m <= 2).
        #[arg(long)]
        no_symbolic: bool,
        /// A coordinatized curve file, checked as given.
        #[arg(long)]
        curve: Option<String>,
    },
    /// Uniform characters semistable on every image of the m-stable classes.
    Window {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        max_unmarked: usize,
        /// Only the two-curve obstruction with k = n - m.
        #[arg(long)]
        pair_only: bool,
    },
}

enum Failure {
    Invalid(String),
    /// A mathematical check failed; the report is still printed.
    Check(String, String),
}

fn invalid<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Invalid(e.to_string())
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{path}: {e}")))
}

fn load_curve(path: &str) -> Result<Curve, Failure> {
    curve_from_json(&read(path)?).map_err(invalid)
}

fn parse_chi(s: &str, n: usize) -> Result<Character, Failure> {
    let a = parse_vec(s).map_err(invalid)?;
    if a.len() != n {
        return Err(Failure::Invalid(format!("character has {} entries, expected {n}", a.len())));
    }
    Ok(Character::new(a))
}

fn qs(v: &[Q]) -> String {
    v.iter().map(fmt_q).collect::<Vec<_>>().join(",")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn window_json(w: &ChiWindow) -> Value {
    json!({
        "lower": w.lower.as_ref().map(fmt_q),
        "upper": w.upper.as_ref().map(fmt_q),
        "empty": w.is_empty(),
        "interval": w.describe(),
    })
}

fn identity_tsv(rows: &[(String, IdentityReport)]) -> String {
    let mut s = String::from("class\tidentity\tchecked\tholds\n");
    for (class, r) in rows {
        for (k, (checked, ok)) in r.pass_vector() {
            let _ = writeln!(s, "{class}\t{k}\t{checked}\t{ok}");
        }
    }
    s
}

fn run(cli: Cli) -> Result<String, Failure> {
    let fmt = cli.format;
    let tsv = fmt == Some(Format::Tsv);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match cli.verb {
        Verb::Validate { curve } => {
            let c = load_curve(&curve)?;
            let form = canonical_form(&c);
            if tsv {
                return Ok(format!("canonical\t{form}\n"));
            }
            Ok(pretty(&json!({ "valid": true, "canonical": form, "curve": c })))
        }
        Verb::Stability { curve, chi } => {
            let c = load_curve(&curve)?;
            let chi = parse_chi(&chi.chi, c.n)?;
            let v = is_semistable(&c, &chi).map_err(invalid)?;
            if tsv {
                return Ok(format!(
                    "semistable\t{}\nstable\t{}\nfinite_reduced_stabilizer\t{}\nviolations\t{}\ntight\t{}\n",
                    v.semistable,
                    v.stable,
                    v.finite_reduced_stabilizer,
                    v.violations.join(";"),
                    v.tight.join(";")
                ));
            }
            Ok(pretty(&serde_json::to_value(&v).expect("json")))
        }
        Verb::Polytope { curve } => {
            let c = load_curve(&curve)?;
            let p = semistability_polytope(&c);
            let om = omega_sets(&c).map_err(|e| Failure::Check(String::new(), e.to_string()))?;
            if tsv {
                let mut s = String::from("name\tcoeffs\trel\trhs\n");
                for k in &p.constraints {
                    let _ = writeln!(s, "{}\t{}\t{}\t{}", k.name, qs(&k.coeffs), k.rel.symbol(), fmt_q(&k.rhs));
                }
                return Ok(s);
            }
            Ok(pretty(&json!({ "n": p.n, "constraints": p.constraints, "omega": om })))
        }
        Verb::Enumerate { n, max_core_m, max_tail_components } => {
            let mut o = EnumOptions::defaults(n);
            o.max_core_m = max_core_m.unwrap_or(o.max_core_m);
            o.max_tail_components = max_tail_components.unwrap_or(o.max_tail_components);
            let cs = enumerate_curves(n, &o).map_err(invalid)?;
            if tsv {
                return Ok(cs.iter().map(|c| canonical_form(c) + "\n").collect());
            }
            let rows: Vec<Value> = cs.iter().map(|c| json!({ "canonical": canonical_form(c), "curve": c })).collect();
            Ok(pretty(&json!({ "n": n, "count": cs.len(), "classes": rows })))
        }
        Verb::Chambers { n, k } => {
            let r = atlas_report(n, k, &mut rng).map_err(invalid)?;
            if fmt == Some(Format::Json) {
                return Ok(pretty(&serde_json::to_value(&r).expect("json")));
            }
            Ok(r.tsv())
        }
        Verb::Classify { n, chi } => {
            let chi = parse_chi(&chi.chi, n)?;
            let curves = enumerate_curves(n, &EnumOptions::defaults(n)).map_err(invalid)?;
            let walls = wall_arrangement(n);
            let on_walls: Vec<String> = walls.iter().filter(|w| w.eval(&chi.a).is_zero()).map(|w| w.label()).collect();
            let mut rows = Vec::new();
            let mut constancy = Value::Null;
            for c in &curves {
                let v = is_semistable(c, &chi).map_err(invalid)?;
                rows.push((canonical_form(c), v.semistable, v.stable, is_zu_stable(c)));
            }
            if on_walls.is_empty() {
                let signs = walls.iter().map(|w| if w.eval(&chi.a) > Q::zero() { 1 } else { -1 }).collect();
                let lo = chi.a.iter().fold(Q::from_integer((-1).into()), |m, x| m.min(x - Q::from_integer(1.into())));
                let hi = chi.a.iter().fold(Q::from_integer((n as i64 + 1).into()), |m, x| m.max(x + Q::from_integer(1.into())));
                let ch = Chamber { id: 0, signs, witness: chi.a.clone() };
                classify_chamber(&ch, &curves, &BoxBounds { lo, hi }, 5, &mut rng)
                    .map_err(|e| Failure::Check(String::new(), e.to_string()))?;
                constancy = json!("verified at 5 interior points");
            }
            if tsv {
                let mut s = String::from("class\tsemistable\tstable\tzu_stable\n");
                for (c, a, b, z) in &rows {
                    let _ = writeln!(s, "{c}\t{a}\t{b}\t{z}");
                }
                return Ok(s);
            }
            let rows: Vec<Value> = rows
                .iter()
                .map(|(c, a, b, z)| json!({ "class": c, "semistable": a, "stable": b, "zu_stable": z }))
                .collect();
            Ok(pretty(&json!({ "chi": chi, "walls": on_walls, "constancy": constancy, "classes": rows })))
        }
        Verb::Smyth { mode, chi, max_unmarked, curve } => {
            let mode = Mode::parse(&mode).ok_or_else(|| Failure::Invalid(format!("unknown mode {mode}")))?;
            if let Some(path) = curve {
                let raw = read(&path)?;
                let mut c: Curve = serde_json::from_str(&raw).map_err(invalid)?;
                c.allow_unmarked = true;
                let c = git1::curve::validate_curve(c).map_err(invalid)?;
                let chi = parse_chi(&chi.chi, c.n)?;
                let m = mode.m(c.n);
                let ok = is_m_stable(&c, m).map_err(invalid)?;
                let img = contract_unmarked(&c).map_err(invalid)?;
                let v = is_semistable(&img, &chi).map_err(invalid)?;
                let out = pretty(&json!({
                    "m": m, "m_stable": ok, "image": canonical_form(&img), "image_semistable": v.semistable,
                }));
                if ok && !v.semistable {
                    return Err(Failure::Check(out, "image is not semistable".into()));
                }
                return Ok(out);
            }
            let n = parse_vec(&chi.chi).map_err(invalid)?.len();
            let chi = parse_chi(&chi.chi, n)?;
            let mut caps = SmythEnum::defaults(n);
            caps.max_unmarked = max_unmarked;
            let r = check_inclusion(mode, &chi, &caps).map_err(invalid)?;
            let out = if tsv {
                let mut s = String::from("curve\timage\tfailed\n");
                for v in &r.violations {
                    let _ = writeln!(s, "{}\t{}\t{}", v.curve, v.image, v.failed.join(";"));
                }
                s
            } else {
                pretty(&serde_json::to_value(&r).expect("json"))
            };
            if r.violations.is_empty() {
                Ok(out)
            } else {
                Err(Failure::Check(out, format!("{} violations", r.violations.len())))
            }
        }
        Verb::VerifyIdentities { core, m, n, draws, no_symbolic, curve } => {
            let mut rows: Vec<(String, IdentityReport)> = Vec::new();
            if let Some(path) = curve {
                let cc = coordinatized_from_json(&read(&path)?).map_err(invalid)?;
                rows.push((canonical_form(&cc.base), verify_identities(&cc).map_err(invalid)?));
            } else {
                let (Some(core), Some(m), Some(n)) = (core, m, n) else {
                    return Err(Failure::Invalid("need --curve, or all of --core, --m and --n".into()));
                };
                let kind = match core.as_str() {
                    "fold" => CoreKind::Fold(m),
                    "ngon" => CoreKind::Ngon(m),
                    _ => return Err(Failure::Invalid(format!("core must be fold or ngon, got {core}"))),
                };
                let mut o = EnumOptions::defaults(n);
                o.max_core_m = o.max_core_m.max(m);
                let classes: Vec<Curve> = enumerate_curves(n, &o)
                    .map_err(invalid)?
                    .into_iter()
                    .filter(|c| c.core == kind && is_realizable(c))
                    .collect();
                if classes.is_empty() {
                    return Err(Failure::Invalid(format!("no coordinate-realizable class with core {core}({m}) and n = {n}")));
                }
                for (idx, c) in classes.iter().enumerate() {
                    let seed = cli.seed.wrapping_mul(1_000_003).wrapping_add(idx as u64);
                    let mut r = verify_random(c, draws, seed).map_err(invalid)?;
                    if m <= 2 && !no_symbolic {
                        let mut s = verify_symbolic(c).map_err(invalid)?;
                        s.parameters = "symbolic".into();
                        r.merge(&s);
                    }
                    r.parameters = format!("{draws} draws{}", if m <= 2 && !no_symbolic { " + symbolic" } else { "" });
                    rows.push((canonical_form(c), r));
                }
            }
            let all = rows.iter().all(|(_, r)| r.all_hold());
            let out = if tsv {
                identity_tsv(&rows)
            } else {
                let v: Vec<Value> = rows
                    .iter()
                    .map(|(c, r)| json!({ "class": c, "all_hold": r.all_hold(), "report": r }))
                    .collect();
                pretty(&json!({ "seed": cli.seed, "all_hold": all, "classes": v }))
            };
            if all {
                Ok(out)
            } else {
                Err(Failure::Check(out, "some identities fail".into()))
            }
        }
        Verb::Window { n, m, max_unmarked, pair_only } => {
            if m == 0 || m >= n {
                return Err(Failure::Invalid("need 1 <= m < n".into()));
            }
            let curves = if pair_only {
                let (a, b) = obstruction_pair(n, n - m).map_err(invalid)?;
                vec![a, b]
            } else {
                let mut caps = SmythEnum::defaults(n);
                caps.max_unmarked = max_unmarked;
                enumerate_m_stable(n, m, &caps).map_err(invalid)?
            };
            let w = uniform_chi_window(&curves, m).map_err(invalid)?;
            let images: Vec<Curve> = curves.iter().map(contract_unmarked).collect::<Result<_, _>>().map_err(invalid)?;
            let common = common_character(&images);
            if tsv {
                return Ok(format!(
                    "classes\t{}\nwindow\t{}\ncommon_character\t{}\n",
                    curves.len(),
                    w.describe(),
                    common.map_or("none".into(), |c| qs(&c.a))
                ));
            }
            Ok(pretty(&json!({
                "n": n, "m": m, "classes": curves.len(), "window": window_json(&w), "common_character": common,
            })))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(out, msg)) => {
            print!("{out}");
            eprintln!("check failed: {msg}");
            ExitCode::from(3)
        }
    }
}
