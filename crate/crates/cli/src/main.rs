use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mincomp_core::construct::{self, ConstructOptions};
use mincomp_core::cyclic::{self, CyclicOptions, CyclicSet};
use mincomp_core::epclass::{self, ClassifierVerdict, ClassifyOptions};
use mincomp_core::intset::density;
use mincomp_core::sumset;
use mincomp_core::verify::{self, Inspect, MacReport, Verdict};
use mincomp_core::{expr, EventualSet, IntegerSet, Window};

#[derive(Parser)]
#[command(
    name = "mincomp",
    version,
    about = "Sumsets and minimal additive complements of integer sets",
    after_help = "SET SYNTAX:\n\
                  \n  fin:1,3,7                       finite set\
                  \n  ep:m=5;A=0,1;B=-3;F=2           (mN + A) u B u F\
                  \n  per:m=3;R=0,1                   R + mZ\
                  \n  gen:pow2  gen:pow(3)  gen:mersenne  gen:squares\
                  \n  gen:lacunary(lambda=3/2,start=2)\
                  \n  interval-union:2^2k..2^2k+1\
                  \n\nEXIT STATUS:\n\
                  \n  0  definitive answer (on the stated window)\
                  \n  1  error\
                  \n  2  unknown, or evidence only"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args)]
struct WindowArg {
    /// Window lo:hi
    #[arg(long, default_value = "-10:10", value_parser = parse_window, allow_hyphen_values = true)]
    window: Window,
}

#[derive(Subcommand)]
enum Command {
    /// Elements of C + W on a window
    Sumset {
        c: String,
        w: String,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Largest gap between consecutive elements on a window
    Gap {
        set: String,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Check that C is a minimal complement to W on a window
    VerifyMac {
        c: String,
        w: String,
        #[command(flatten)]
        window: WindowArg,
        /// Elements of C that need a dependent element (default: the window)
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        inspect: Option<Window>,
    },
    /// Build a co-minimal partner for a set with arbitrarily large gaps
    BuildCominimal {
        c: String,
        #[command(flatten)]
        window: WindowArg,
        /// Run this many extension steps instead of certifying a window
        #[arg(long)]
        depth: Option<usize>,
        /// Most candidates examined per search
        #[arg(long, default_value_t = ConstructOptions::default().budget)]
        budget: u64,
    },
    /// Search small finite partners W and try to refute each one
    Refute {
        c: String,
        /// Largest |W| tried
        #[arg(long, default_value_t = 2)]
        w_size_max: usize,
        /// W ranges over subsets of [-radius, radius]
        #[arg(long, default_value_t = 20)]
        radius: i64,
    },
    /// Decide whether a periodic set arises as a minimal complement mod m
    SolveCyclic {
        set: String,
        #[arg(long, env = cyclic::MAX_MODULUS_ENV)]
        max_modulus: Option<u32>,
    },
    /// All minimal complements to a periodic set mod m
    EnumMinComplements {
        w: String,
        #[arg(long, env = cyclic::MAX_MODULUS_ENV)]
        max_modulus: Option<u32>,
    },
    /// Domination and upper domination numbers of the unit Cayley graph of Z/n
    CayleyDom {
        n: u32,
        #[arg(long, env = cyclic::MAX_MODULUS_ENV)]
        max_modulus: Option<u32>,
    },
    /// Classify an eventually periodic set
    ClassifyEp {
        set: String,
        #[command(flatten)]
        window: WindowArg,
        /// Stop after the necessary conditions
        #[arg(long)]
        no_certify: bool,
        #[arg(long, default_value_t = epclass::DEFAULT_MAX_MODULUS)]
        max_modulus: u32,
    },
    /// Banach densities of an eventually periodic set
    Density {
        set: String,
        /// Read the set as the full periodic set A + mZ
        #[arg(long)]
        two_sided: bool,
    },
    /// Explicit complements built class by class
    CoverConstruct {
        #[command(subcommand)]
        kind: CoverKind,
    },
}

#[derive(Subcommand)]
enum CoverKind {
    /// Minimal W' with F + W' = F + W for finite F
    Rest {
        /// Finite set F, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Vec<i64>,
        /// W, any eventually periodic set expression
        #[arg(long, default_value = "per:m=1;R=0")]
        w: String,
    },
    /// (3N u 3Z+1) u F with an explicit partner
    Arising {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Vec<i64>,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Partner for an eventually periodic set in the prime-modulus regime
    Prime {
        set: String,
        #[command(flatten)]
        window: WindowArg,
        #[arg(long, default_value_t = epclass::DEFAULT_MAX_MODULUS)]
        max_modulus: u32,
    },
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = lo.trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("hi: {e}"))?;
    Window::new(lo, hi).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Definitive,
    Evidence,
}

struct Report {
    status: Status,
    /// Always carries a `"verdict"` key; the text form shows the same one.
    json: Value,
    text: Vec<String>,
}

fn parse_set(text: &str) -> Result<IntegerSet> {
    expr::parse(text).with_context(|| format!("parsing {text:?}"))
}

/// The residues of a two-sided periodic set.
fn cyclic_of(text: &str) -> Result<CyclicSet> {
    let set = parse_set(text)?;
    let e = set
        .to_eventual()
        .ok_or_else(|| anyhow!("{text} is not periodic; write it as per:m=..;R=.."))?;
    let m = e.period();
    let (lo, hi) = e.cuts();
    let pattern = e.up_residues();
    let periodic = e.down_residues() == pattern
        && (lo - m as i64..=hi + m as i64).all(|z| e.contains_i64(z) == pattern[z.rem_euclid(m as i64) as usize]);
    if !periodic {
        bail!("{text} is not periodic; write it as per:m=..;R=..");
    }
    let m = u32::try_from(m).context("period too large")?;
    let residues: Vec<i64> = (0..m as i64).filter(|&r| pattern[r as usize]).collect();
    Ok(CyclicSet::new(m, &residues)?)
}

fn cyclic_opts(max_modulus: Option<u32>) -> CyclicOptions {
    match max_modulus {
        Some(max_modulus) => CyclicOptions { max_modulus },
        None => CyclicOptions::default(),
    }
}

fn residues(s: &CyclicSet) -> Vec<u32> {
    s.residues()
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn mac_verdict(r: &MacReport) -> &'static str {
    match r.verdict {
        Verdict::CertifiedOnWindow => "certified_on_window",
        Verdict::CoverageFails { .. } => "coverage_fails",
        Verdict::MinimalityFails { .. } => "minimality_fails",
    }
}

fn mac_lines(label: &str, r: &MacReport) -> Vec<String> {
    let mut out = vec![format!(
        "{label}: {:?} on [{}, {}]",
        r.verdict, r.coverage_window.lo, r.coverage_window.hi
    )];
    out.extend(
        r.witnesses
            .iter()
            .map(|w| format!("  {} = {} + {} is the only representation", w.z, w.c, &w.z - &w.c)),
    );
    out
}

fn eventual_set_text(e: &EventualSet) -> String {
    expr::print(&IntegerSet::Eventual(e.clone()))
}

fn run(cmd: Command) -> Result<Report> {
    Ok(match cmd {
        Command::Sumset { c, w, window } => {
            let (cs, ws) = (parse_set(&c)?, parse_set(&w)?);
            let s = sumset::minkowski_window(&cs, &ws, window.window)?;
            let verdict = if s.complete { "complete" } else { "incomplete" };
            let mut text = vec![format!("{{{}}}", join(&s.elements))];
            if let Some(sup) = s.support {
                text.push(format!("generated elements examined only in [{}, {}]", sup.lo, sup.hi));
            }
            Report {
                status: if s.complete {
                    Status::Definitive
                } else {
                    Status::Evidence
                },
                json: json!({ "command": "sumset", "c": c, "w": w, "verdict": verdict, "result": s }),
                text,
            }
        }
        Command::Gap { set, window } => {
            let g = sumset::gap(&parse_set(&set)?, window.window)?;
            Report {
                status: Status::Definitive,
                json: json!({ "command": "gap", "set": set, "window": window.window, "verdict": "ok", "gap": g.to_string() }),
                text: vec![format!("gap on [{}, {}]: {g}", window.window.lo, window.window.hi)],
            }
        }
        Command::VerifyMac { c, w, window, inspect } => {
            let (cs, ws) = (parse_set(&c)?, parse_set(&w)?);
            let r = verify::verify_mac(
                &cs,
                &ws,
                window.window,
                Inspect::Window(inspect.unwrap_or(window.window)),
            )?;
            // A missing dependent element is only proved missing for finite W.
            let status = match r.verdict {
                Verdict::MinimalityFails { .. } if !ws.is_finite() => Status::Evidence,
                _ => Status::Definitive,
            };
            let mut text = mac_lines("C to W", &r);
            text.push(r.caveat.clone());
            Report {
                status,
                json: json!({ "command": "verify-mac", "c": c, "w": w, "verdict": mac_verdict(&r), "report": r }),
                text,
            }
        }
        Command::BuildCominimal {
            c,
            window,
            depth,
            budget,
        } => {
            let cs = parse_set(&c)?;
            let opts = ConstructOptions { budget };
            match depth {
                Some(depth) => {
                    let r = construct::build_w(&cs, depth, &opts)?;
                    let text = vec![
                        format!("W = {{{}}}", join(&r.w)),
                        format!("C + W covers every integer below {}", r.coverage_bound),
                        format!("{} uniquely represented sums", r.witnesses.len()),
                    ];
                    Report {
                        status: Status::Definitive,
                        json: json!({ "command": "build-cominimal", "c": c, "verdict": "constructed", "construction": r }),
                        text,
                    }
                }
                None => {
                    let p = construct::build_cominimal(&cs, window.window, &opts)?;
                    let mut text = vec![format!("W' = {{{}}} (pruned from {})", join(&p.w), p.unpruned_size)];
                    text.extend(mac_lines("C to W'", &p.c_to_w));
                    text.extend(mac_lines("W' to C", &p.w_to_c));
                    text.push(p.c_to_w.caveat.clone());
                    Report {
                        status: Status::Definitive,
                        json: json!({ "command": "build-cominimal", "c": c, "verdict": "certified_on_window", "pair": p }),
                        text,
                    }
                }
            }
        }
        Command::Refute { c, w_size_max, radius } => {
            let ev = verify::refute_mac_bounded(&parse_set(&c)?, w_size_max, radius)?;
            let verdict = if ev.survivors.is_empty() {
                "no_survivors"
            } else {
                "survivors"
            };
            let mut text = vec![format!(
                "{} candidates, {} covering, {} survivors",
                ev.candidates_examined,
                ev.covering_candidates,
                ev.survivors.len()
            )];
            text.extend(ev.survivors.iter().map(|w| format!("  survivor W = {{{}}}", join(w))));
            text.push(ev.caveat.clone());
            Report {
                status: Status::Evidence,
                json: json!({ "command": "refute", "c": c, "verdict": verdict, "evidence": ev }),
                text,
            }
        }
        Command::SolveCyclic { set, max_modulus } => {
            let c = cyclic_of(&set)?;
            let a = cyclic::solve_arises(&c, &cyclic_opts(max_modulus))?;
            let verdict = if a.arises { "arises" } else { "does_not_arise" };
            let mut text = vec![format!("C = {{{}}} mod {}: {verdict}", join(residues(&c)), a.m)];
            if let Some(w) = &a.witness {
                text.push(format!("W = {{{}}}", join(w)));
            }
            Report {
                status: if a.exhausted || a.arises {
                    Status::Definitive
                } else {
                    Status::Evidence
                },
                json: json!({ "command": "solve-cyclic", "set": set, "verdict": verdict, "answer": a }),
                text,
            }
        }
        Command::EnumMinComplements { w, max_modulus } => {
            let ws = cyclic_of(&w)?;
            let all = cyclic::enumerate_minimal_complements(&ws, &cyclic_opts(max_modulus))?;
            let list: Vec<Vec<u32>> = all.iter().map(residues).collect();
            let mut text = vec![format!("{} minimal complements mod {}", list.len(), ws.modulus())];
            text.extend(list.iter().map(|c| format!("  {{{}}}", join(c))));
            Report {
                status: Status::Definitive,
                json: json!({
                    "command": "enum-min-complements", "w": w, "m": ws.modulus(),
                    "verdict": "complete", "count": list.len(), "complements": list,
                }),
                text,
            }
        }
        Command::CayleyDom { n, max_modulus } => {
            let d = cyclic::cayley_domination(n, &cyclic_opts(max_modulus))?;
            Report {
                status: Status::Definitive,
                json: json!({ "command": "cayley-dom", "verdict": "ok", "result": d }),
                text: vec![
                    format!("gamma = {}, witness {{{}}}", d.gamma, join(&d.gamma_witness)),
                    format!(
                        "upper gamma = {}, witness {{{}}}",
                        d.upper_gamma,
                        join(&d.upper_gamma_witness)
                    ),
                ],
            }
        }
        Command::ClassifyEp {
            set,
            window,
            no_certify,
            max_modulus,
        } => {
            let IntegerSet::Ep(s) = parse_set(&set)? else {
                bail!("{set} is not an eventually periodic set; write it as ep:m=..;A=..");
            };
            let opts = ClassifyOptions {
                certify: !no_certify,
                window: window.window,
                max_modulus,
            };
            let v = epclass::classify(&s, &opts)?;
            let mut body = serde_json::to_value(&v)?;
            let verdict = body["verdict"].as_str().unwrap_or_default().to_string();
            let mut text = vec![format!("verdict: {verdict}")];
            match &v {
                ClassifierVerdict::RuledOut { reason, detail } => text.push(format!("{reason:?}: {detail}")),
                ClassifierVerdict::NecessaryPass { partition, .. }
                | ClassifierVerdict::Unknown {
                    partition: Some(partition),
                    ..
                } => text.push(format!("labels: {:?}", partition.labels)),
                ClassifierVerdict::ArisesCertified { route, w, report, .. } => {
                    text.push(format!("route {route}, W = {w}"));
                    text.push(report.caveat.clone());
                }
                _ => {}
            }
            if let ClassifierVerdict::Unknown { note, .. } = &v {
                text.push(note.clone());
            }
            body["command"] = json!("classify-ep");
            body["set"] = json!(set);
            Report {
                status: if v.is_definitive() {
                    Status::Definitive
                } else {
                    Status::Evidence
                },
                json: body,
                text,
            }
        }
        Command::Density { set, two_sided } => {
            let IntegerSet::Ep(s) = parse_set(&set)? else {
                bail!("{set} is not an eventually periodic set; write it as ep:m=..;A=..");
            };
            let d = density(&s, two_sided);
            Report {
                status: Status::Definitive,
                text: vec![
                    format!("upper Banach density {}", d.upper_banach),
                    format!("lower Banach density {}", d.lower_banach),
                    format!("tail density {} ({})", d.eventual_density, d.convention),
                ],
                json: json!({ "command": "density", "set": set, "verdict": "ok", "density": d }),
            }
        }
        Command::CoverConstruct { kind } => cover(kind)?,
    })
}

fn cover(kind: CoverKind) -> Result<Report> {
    Ok(match kind {
        CoverKind::Rest { f, w } => {
            let we = parse_set(&w)?
                .to_eventual()
                .ok_or_else(|| anyhow!("{w} is not eventually periodic"))?;
            let r = construct::finite_rest_cover(&f, &we)?;
            let w_prime = eventual_set_text(&r.w);
            let mut text = vec![format!("W' = {w_prime}")];
            text.extend(r.witnesses.iter().map(|(fi, p)| format!("  {p} needs {fi}")));
            Report {
                status: Status::Definitive,
                json: json!({
                    "command": "cover-construct", "kind": "rest", "f": f, "w": w,
                    "verdict": "constructed", "w_prime": w_prime, "witnesses": r.witnesses,
                }),
                text,
            }
        }
        CoverKind::Arising { f, window } => {
            let r = construct::build_arising_family(&f, window.window)?;
            let c = expr::print(&IntegerSet::Ep(r.c.clone()));
            let (y, w_prime) = (eventual_set_text(&r.y), eventual_set_text(&r.w_prime));
            let mut text = vec![format!("C = {c}"), format!("Y = {y}"), format!("W' = {w_prime}")];
            text.extend(mac_lines("Y u W' to C", &r.report));
            Report {
                status: Status::Definitive,
                json: json!({
                    "command": "cover-construct", "kind": "arising", "f": f,
                    "verdict": mac_verdict(&r.report), "c": c, "y": y, "w_prime": w_prime, "report": r.report,
                }),
                text,
            }
        }
        CoverKind::Prime {
            set,
            window,
            max_modulus,
        } => {
            let IntegerSet::Ep(s) = parse_set(&set)? else {
                bail!("{set} is not an eventually periodic set");
            };
            let (partition, y_a) = epclass::find_y_partition(&s, max_modulus)?
                .ok_or_else(|| anyhow!("{set} has no labeling satisfying the necessary conditions"))?;
            let r = construct::build_prime_cover(&s, &partition, &y_a, window.window)?;
            let w = eventual_set_text(&r.w);
            let mut text = vec![format!("W = {w}")];
            text.extend(mac_lines("W to C", &r.report));
            Report {
                status: Status::Definitive,
                json: json!({
                    "command": "cover-construct", "kind": "prime", "set": set,
                    "verdict": mac_verdict(&r.report), "w": w, "pieces": r.pieces,
                    "labels": partition.labels, "report": r.report,
                }),
                text,
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("reports serialize")
                );
            } else {
                println!("verdict: {}", report.json["verdict"].as_str().unwrap_or_default());
                for line in report.text.iter().filter(|l| !l.starts_with("verdict: ")) {
                    println!("{line}");
                }
            }
            match report.status {
                Status::Definitive => ExitCode::SUCCESS,
                Status::Evidence => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
