use clap::{Parser, Subcommand, ValueEnum};
use pointed_hopf::braided::{twist_report, Braiding};
use pointed_hopf::datum::enumerate_data;
use pointed_hopf::groups::AbelianGroup;
use pointed_hopf::io::{load_triple, IoError, TripleFile};
use pointed_hopf::isomorphy::{check_soundness, find_isomorphisms, IsoError, IsoTriple, Triple};
use pointed_hopf::kalgebra::KAlgebra;
use pointed_hopf::uqgroup::{cauchy_report, expected_dimension, UAlgebra};
use serde_json::{json, Value};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "pointed", version, about = "Pointed Hopf algebras u(D, lambda, mu) over finite abelian groups")]
struct Cli {
    /// Degree cap for PBW rewriting (overrides QF_DEGREE_CAP).
    #[arg(long, global = true)]
    degree_cap: Option<u64>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a datum and its parameters.
    Validate {
        #[arg(long)]
        datum: String,
    },
    /// List all data of finite Cartan type over a group.
    Enumerate {
        /// e.g. "Z/11" or "Z/11 x Z/13"
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1)]
        theta_max: usize,
    },
    /// Construct u(D, lambda, mu) and report its dimension.
    Build {
        #[arg(long)]
        datum: String,
    },
    /// Print u_alpha(mu) for every positive root.
    Ualpha {
        #[arg(long)]
        datum: String,
    },
    /// Print the coproduct constants t^a_(b,c) of one component.
    Constants {
        #[arg(long)]
        datum: String,
        /// 1-based component index.
        #[arg(long, default_value_t = 1)]
        component: usize,
        /// Largest height of underline(a); defaults to the highest root.
        #[arg(long)]
        max_height: Option<u64>,
    },
    /// Decide whether two triples give isomorphic Hopf algebras.
    Iso {
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        /// Also run the relation-by-relation check on each witness.
        #[arg(long)]
        check: bool,
    },
    /// Check the Hopf algebra axioms on sampled basis elements.
    Verify {
        #[arg(long)]
        datum: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Twist the braiding of a datum into another one (default: its symmetric braiding).
    Twist {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Prime divisors of the dimension and group-likes of those orders.
    Cauchy {
        #[arg(long)]
        datum: String,
    },
}

enum Failure {
    Admissibility(String),
    Internal(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        if e.is_admissibility() {
            Failure::Admissibility(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Internal(e.to_string())
}

/// Text and JSON forms of a command result, and its exit code.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.degree_cap {
        std::env::set_var("QF_DEGREE_CAP", cap.to_string());
    }
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).unwrap()),
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Admissibility(msg)) => {
            eprintln!("not admissible: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Validate { datum } => validate(datum),
        Command::Enumerate { group, theta_max } => enumerate(group, *theta_max),
        Command::Build { datum } => build(datum),
        Command::Ualpha { datum } => ualpha(datum),
        Command::Constants {
            datum,
            component,
            max_height,
        } => constants(datum, *component, *max_height),
        Command::Iso { src, dst, check } => iso(src, dst, *check, cli.degree_cap),
        Command::Verify { datum, samples } => verify(datum, *samples, cli.seed),
        Command::Twist {
            datum,
            target,
            max_degree,
        } => twist(datum, target.as_deref(), *max_degree),
        Command::Cauchy { datum } => cauchy(datum),
    }
}

fn validate(path: &str) -> Result<Output, Failure> {
    let t = load_triple(path)?;
    let d = &t.datum;
    let comps: Vec<Value> = d
        .roots
        .components
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            json!({
                "type": format!("{:?}", comp.ctype),
                "vertices": comp.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "order": d.orders[c],
                "positive_roots": d.roots.component_roots[c].len(),
            })
        })
        .collect();
    let mut text = format!("valid datum over {} of rank {}\n", d.group, d.theta());
    for (c, comp) in d.roots.components.iter().enumerate() {
        text += &format!(
            "component {}: {:?} on vertices {:?}, N = {}\n",
            c + 1,
            comp.ctype,
            comp.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
            d.orders[c]
        );
    }
    for w in d.warnings() {
        text += &format!("warning: {w}\n");
    }
    Ok(Output::ok(
        text,
        json!({"valid": true, "group": d.group.to_string(), "theta": d.theta(), "components": comps, "warnings": d.warnings()}),
    ))
}

fn enumerate(group: &str, theta_max: usize) -> Result<Output, Failure> {
    let g = AbelianGroup::parse(group).map_err(|e| Failure::Admissibility(e.to_string()))?.group;
    let mut text = String::new();
    let mut list = Vec::new();
    for d in enumerate_data(&g, theta_max) {
        let f = TripleFile::from_triple(&Triple {
            datum: d,
            lambda: Default::default(),
            mu: Default::default(),
        });
        text += &format!("g = {:?}, chi = {:?}, cartan = {:?}\n", f.g, f.chi, f.cartan);
        list.push(f);
    }
    text += &format!("{} data\n", list.len());
    Ok(Output::ok(text, json!({"count": list.len(), "data": list})))
}

fn build(path: &str) -> Result<Output, Failure> {
    let t = load_triple(path)?;
    let u = UAlgebra::build(&t.datum, &t.lambda, &t.mu).map_err(internal)?;
    let dim = u.dimension();
    let text = format!(
        "dim = {}\nPBW exponent vectors = {}\ngroup order = {}\n",
        dim,
        dim / t.datum.group.order() as u128,
        t.datum.group.order()
    );
    Ok(Output::ok(
        text,
        json!({"dim": dim.to_string(), "expected": expected_dimension(&t.datum).to_string(), "group_order": t.datum.group.order()}),
    ))
}

fn ualpha(path: &str) -> Result<Output, Failure> {
    let t = load_triple(path)?;
    let d = &t.datum;
    let mut text = String::new();
    let mut rows = Vec::new();
    for c in 0..d.roots.components.len() {
        let k = KAlgebra::new(d, c).map_err(internal)?;
        let fam = k.build_ufamily(&t.mu).map_err(internal)?;
        for (local, l) in d.roots.component_roots[c].clone().enumerate() {
            let u = fam.u_root(local, k.num_roots());
            let mu = t.mu.get(l).map(|x| x.to_string()).unwrap_or_else(|| "0".into());
            text += &format!("alpha = {:?}: mu = {}, u = {}\n", d.roots.roots[l], mu, u);
            rows.push(json!({"root": d.roots.roots[l], "mu": mu, "u": u.to_string()}));
        }
    }
    Ok(Output::ok(text, json!({"zeta_order": d.modulus(), "u_alpha": rows})))
}

fn constants(path: &str, component: usize, max_height: Option<u64>) -> Result<Output, Failure> {
    let t = load_triple(path)?;
    let d = &t.datum;
    if component == 0 || component > d.roots.components.len() {
        return Err(Failure::Admissibility(format!("no component {component}")));
    }
    let k = KAlgebra::new(d, component - 1).map_err(internal)?;
    let top = k.pbw.roots.iter().map(|r| r.iter().sum::<i64>() as u64).max().unwrap_or(0);
    let mut text = format!(
        "component {} roots (convex order): {:?}\nconstants in Q(zeta_{})\n",
        component,
        k.pbw.roots,
        k.field().order()
    );
    let mut rows = Vec::new();
    for a in k.exponents_up_to(max_height.unwrap_or(top)) {
        let ta = k.coproduct_constants(&a).map_err(internal)?;
        for ((b, c), v) in ta.iter() {
            text += &format!("a = {:?}, b = {:?}, c = {:?}: {}\n", a, b, c, v);
            rows.push(json!({"a": a, "b": b, "c": c, "t": v.to_string()}));
        }
    }
    Ok(Output::ok(
        text,
        json!({"roots": k.pbw.roots, "zeta_order": k.field().order(), "constants": rows}),
    ))
}

fn describe_triple(src: &Triple, t: &IsoTriple) -> (String, Value) {
    let images: Vec<String> = t.phi.images.iter().map(|g| g.to_string()).collect();
    let sigma: Vec<usize> = t.sigma.iter().map(|i| i + 1).collect();
    let (s_text, s_json) = match &t.s {
        Some(w) => {
            let s: Vec<String> = w.s.iter().map(|x| x.to_string()).collect();
            (format!("{:?} in Q(zeta_{})", s, w.field.order()), json!({"zeta_order": w.field.order(), "values": s}))
        }
        None => ("solvable, no cyclotomic witness".to_string(), json!("solvable, no cyclotomic witness")),
    };
    let gens: Vec<String> = (0..src.datum.group.rank()).map(|k| format!("e{}", k + 1)).collect();
    (
        format!("phi: {:?} -> {:?}, sigma = {:?}, s = {}", gens, images, sigma, s_text),
        json!({"phi": images, "sigma": sigma, "s": s_json}),
    )
}

fn iso(src: &str, dst: &str, check: bool, cap: Option<u64>) -> Result<Output, Failure> {
    let a = load_triple(src)?;
    let b = load_triple(dst)?;
    let res = match find_isomorphisms(&a, &b, cap) {
        Ok(r) => r,
        Err(IsoError::RankMismatch { src, dst }) => {
            return Ok(Output::ok(
                format!("no isomorphism (ranks {src} and {dst} differ)\n"),
                json!({"isomorphic": false, "reason": "rank"}),
            ))
        }
        Err(e @ IsoError::OrderHypothesisViolated(_)) => return Err(Failure::Admissibility(e.to_string())),
        Err(e) => return Err(internal(e)),
    };
    let mut text = String::new();
    let mut found = Vec::new();
    for t in &res.found {
        let (line, mut v) = describe_triple(&a, t);
        text += &format!("isomorphism: {line}\n");
        if check && t.s.is_some() {
            let report = check_soundness(&a, &b, t).map_err(internal)?;
            text += &format!("  relations preserved: {}\n", report.passed());
            v["sound"] = json!(report.passed());
        }
        found.push(v);
    }
    let undecided: Vec<Value> = res
        .undecided
        .iter()
        .map(|u| {
            json!({
                "phi": u.phi.images.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "sigma": u.sigma.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "component": u.component + 1,
            })
        })
        .collect();
    for u in &res.undecided {
        text += &format!(
            "undecided: sigma = {:?}, component {} exceeds the degree cap\n",
            u.sigma.iter().map(|i| i + 1).collect::<Vec<_>>(),
            u.component + 1
        );
    }
    let code = if res.found.is_empty() && !res.undecided.is_empty() {
        3
    } else {
        0
    };
    if res.found.is_empty() && res.undecided.is_empty() {
        text += "no isomorphism\n";
    }
    Ok(Output {
        text,
        json: json!({"isomorphic": !res.found.is_empty(), "isomorphisms": found, "undecided": undecided}),
        code,
    })
}

fn verify(path: &str, samples: usize, seed: u64) -> Result<Output, Failure> {
    let t = load_triple(path)?;
    let u = UAlgebra::build(&t.datum, &t.lambda, &t.mu).map_err(internal)?;
    let report = u.verify_hopf(samples, seed).map_err(internal)?;
    let mut text = String::new();
    for (name, ok, detail) in &report.checks {
        text += &format!("{} {}{}\n", if *ok { "ok  " } else { "FAIL" }, name, if detail.is_empty() { String::new() } else { format!(" ({detail})") });
    }
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|(n, ok, d)| json!({"check": n, "ok": ok, "detail": d}))
        .collect();
    Ok(Output {
        text,
        json: json!({"passed": report.passed(), "checks": checks}),
        code: if report.passed() { 0 } else { 1 },
    })
}

fn twist(path: &str, target: Option<&str>, max_degree: usize) -> Result<Output, Failure> {
    let t = load_triple(path)?;
    let q = Arc::new(t.datum.braiding());
    let q2: Braiding = match target {
        Some(p) => {
            let t2 = load_triple(p)?;
            if t.datum.modulus() != t2.datum.modulus() {
                return Err(Failure::Admissibility("the two data use different fields".into()));
            }
            t2.datum.braiding()
        }
        None => t.datum.symmetric_braiding().map_err(|e| Failure::Admissibility(e.to_string()))?,
    };
    let q2 = Arc::new(q2);
    let report = twist_report(&q, &q2, max_degree).map_err(|e| Failure::Admissibility(e.to_string()))?;
    let mut text = format!("cocycle exponents (zeta_{}): {:?}\n", q.field.order(), report.cocycle.exps);
    for (name, n, ok) in &report.checks {
        text += &format!("{} {} on {} cases\n", if *ok { "ok  " } else { "FAIL" }, name, n);
    }
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|(name, n, ok)| json!({"check": name, "cases": n, "ok": ok}))
        .collect();
    Ok(Output {
        text,
        json: json!({"cocycle": report.cocycle.exps, "zeta_order": q.field.order(), "checks": checks}),
        code: if report.passed() { 0 } else { 1 },
    })
}

fn cauchy(path: &str) -> Result<Output, Failure> {
    let t = load_triple(path)?;
    let dim = expected_dimension(&t.datum);
    let r = cauchy_report(&t.datum, dim);
    let mut text = format!("dim = {}\n", dim);
    let mut rows = Vec::new();
    for (p, w, div) in &r.primes {
        let w_s = w.as_ref().map(|g| g.to_string());
        text += &format!(
            "p = {}: divides |Gamma| = {}, group-like of order p: {}\n",
            p,
            div,
            w_s.clone().unwrap_or_else(|| "none".into())
        );
        rows.push(json!({"p": p, "divides_group_order": div, "witness": w_s}));
    }
    Ok(Output {
        text,
        json: json!({"dim": dim.to_string(), "primes": rows, "passed": r.passed()}),
        code: if r.passed() { 0 } else { 1 },
    })
}
