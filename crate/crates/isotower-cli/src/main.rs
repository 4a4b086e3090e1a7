//! isotower: print the 2-isogeny level tree, decorate it with exact values,
//! build chains and division fields, and run the machine-checked claim suite.

mod report;

use clap::{Args, Parser, Subcommand};
use isotower::claims::{self, Mode, Setup};
use isotower::curves::Convention;
use isotower::decoration::{decorate, Policy, Variant};
use isotower::fields::{Field, RatField, TowerField};
use isotower::towers::{build_division_field, Verdict};
use isotower::tree::Vertex;
use isotower::{chain, Error};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "isotower",
    version,
    about = "Exact 2-isogeny towers: level trees, decorations, chains, division fields, \
             and machine-checked claims"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Run over one explicit curve ("specialized") or the generic curve
    /// whose roots are independent transcendentals ("generic").
    #[arg(long, default_value = "specialized")]
    mode: String,
    /// The three Weierstrass roots, comma separated.
    #[arg(long, default_value = "0,1,3", allow_hyphen_values = true)]
    alphas: String,
    /// Deepest level to build.
    #[arg(long, default_value_t = 2)]
    level: u32,
    /// Isogeny target convention: corrected | twisted | literal.
    #[arg(long, default_value = "twisted")]
    convention: String,
    /// Level-2 recursion shape: cc | pl.
    #[arg(long, default_value = "cc")]
    variant: String,
    /// Which quadratic root goes to the first child: plus-first | minus-first.
    #[arg(long, default_value = "plus-first")]
    policy: String,
    /// Seed recorded in the report (reserved; nothing in a run is randomized).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the level tree with kernel labels and parent/twin links.
    Tree {
        #[arg(long, default_value_t = 2)]
        level: u32,
    },
    /// Decorate the tree with exact values and print the degree table.
    Decorate {
        #[command(flatten)]
        common: Common,
    },
    /// Build the recursive isogeny chain and print each level's curves.
    Chain {
        #[command(flatten)]
        common: Common,
    },
    /// Build the 2^n-division field and print its generators and basis.
    Torsion {
        #[command(flatten)]
        common: Common,
    },
    /// Run machine-checked claims and write a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated claim ids (default: every standard claim).
        #[arg(long)]
        claims: Option<String>,
        /// Also run the long opt-in claims.
        #[arg(long, default_value_t = false)]
        long: bool,
        /// Write the JSON report to this path (defaults to stdout JSON after
        /// the table).
        #[arg(long)]
        out: Option<String>,
    },
}

fn parse_alphas(s: &str) -> Result<[i64; 3], Error> {
    let parts: Vec<_> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "--alphas wants three comma-separated integers, got {s:?}"
        )));
    }
    let mut out = [0i64; 3];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p
            .parse()
            .map_err(|_| Error::Config(format!("--alphas component {p:?} is not an integer")))?;
    }
    Ok(out)
}

fn setup_from(common: &Common) -> Result<Setup, Error> {
    let s = Setup {
        mode: Mode::parse(&common.mode)?,
        alphas: parse_alphas(&common.alphas)?,
        max_level: common.level,
        convention: Convention::parse(&common.convention)?,
        variant: Variant::parse(&common.variant)?,
        policy: Policy::parse(&common.policy)?,
    };
    s.validate()?;
    Ok(s)
}

fn main() {
    // Die quietly when a downstream pipe closes, like any line-oriented tool.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Tree { level } => cmd_tree(level),
        Cmd::Decorate { common } => cmd_decorate(&setup_from(&common)?),
        Cmd::Chain { common } => cmd_chain(&setup_from(&common)?),
        Cmd::Torsion { common } => cmd_torsion(&setup_from(&common)?),
        Cmd::Verify {
            common,
            claims,
            long,
            out,
        } => cmd_verify(&setup_from(&common)?, claims.as_deref(), long, out.as_deref(), common.seed),
    }
}

fn cmd_tree(level: u32) -> Result<i32, Error> {
    if level < 1 {
        return Err(Error::Config("level must be at least 1".into()));
    }
    for n in 1..=level {
        let vs = Vertex::level_vertices(n)?;
        println!("level {n}: {} vertices", vs.len());
        for u in vs {
            let (a, b) = u.generator();
            let parent = match u.parent() {
                Some(p) => p.path_string(),
                None => "-".into(),
            };
            println!(
                "  {:<10} kernel <({a},{b})> mod 2^{n}   parent {:<8} twin {}",
                u.path_string(),
                parent,
                u.twin().path_string()
            );
        }
    }
    Ok(0)
}

fn ambient_cap(mode: Mode) -> u32 {
    match mode {
        Mode::Specialized => 3,
        Mode::Generic => 2,
    }
}

fn cmd_decorate(s: &Setup) -> Result<i32, Error> {
    let cap = ambient_cap(s.mode);
    if s.max_level > cap {
        return Err(Error::Config(format!(
            "decorate prints the shared-tower decoration, capped at level {cap} in this \
             mode; deeper levels run per-path inside `verify --claims decoration-soundness`"
        )));
    }
    match s.mode {
        Mode::Specialized => {
            let t = TowerField::over(RatField);
            let al = [
                t.from_i64(s.alphas[0]),
                t.from_i64(s.alphas[1]),
                t.from_i64(s.alphas[2]),
            ];
            print_decoration(&t, &al, s)
        }
        Mode::Generic => {
            let (t, al) = claims::generic_stack(s.max_level + 1)?;
            print_decoration(&t, &al, s)
        }
    }
}

fn print_decoration<B: Field>(
    t: &TowerField<B>,
    al: &[isotower::TowerElem<B>; 3],
    s: &Setup,
) -> Result<i32, Error> {
    println!(
        "decoration at roots ({},{},{}), mode {}, levels <= {}, shape {}, policy {}",
        s.alphas[0],
        s.alphas[1],
        s.alphas[2],
        s.mode.name(),
        s.max_level,
        s.variant.name(),
        s.policy.name()
    );
    let dec = decorate(t, al, s.max_level, s.variant, s.policy)?;
    let dt = &dec.tower;
    for level in 1..=s.max_level {
        println!("level {level}:");
        for (u, a) in dec.level_values(level) {
            println!("  {:<10} value {}", u.path_string(), dt.fmt_elem(a));
        }
        let part = decorate(t, al, level, s.variant, s.policy)?;
        println!(
            "  [degree over the base after level {level}: {}]",
            1u64 << (part.tower.height() - t.height())
        );
    }
    println!("tower generators:");
    for j in t.height()..dt.height() {
        println!(
            "  {} = sqrt({})",
            dt.labels()[j],
            dt.fmt_elem(&dt.radicand(j))
        );
    }
    // Discriminant certificates: each twin pair's squared difference.
    println!("split certificates:");
    for level in 2..=s.max_level {
        for (u, a) in dec.level_values(level) {
            let tw = u.twin();
            if tw.path_string() < u.path_string() {
                continue;
            }
            let b = dec
                .value_of(&tw)
                .ok_or_else(|| Error::Internal("missing twin value".into()))?;
            let d = dt.square(&dt.sub(a, b));
            println!(
                "  ({} - {})^2 = {}",
                u.path_string(),
                tw.path_string(),
                dt.fmt_elem(&d)
            );
        }
    }
    Ok(0)
}

fn cmd_chain(s: &Setup) -> Result<i32, Error> {
    let cap = ambient_cap(s.mode).min(3);
    if s.max_level > cap {
        return Err(Error::Config(format!(
            "chain is built in one shared tower, capped at level {cap} in this mode; \
             deeper edges run per-branch inside `verify --claims kernel-labeled`"
        )));
    }
    match s.mode {
        Mode::Specialized => {
            let t = TowerField::over(RatField);
            let al = [
                t.from_i64(s.alphas[0]),
                t.from_i64(s.alphas[1]),
                t.from_i64(s.alphas[2]),
            ];
            print_chain(&t, &al, s)
        }
        Mode::Generic => {
            let (t, al) = claims::generic_stack(s.max_level + 1)?;
            print_chain(&t, &al, s)
        }
    }
}

fn print_chain<B: Field>(
    t: &TowerField<B>,
    al: &[isotower::TowerElem<B>; 3],
    s: &Setup,
) -> Result<i32, Error> {
    let ch = chain::descend(t, al, s.max_level, s.convention, s.policy)?;
    let ct = &ch.tower;
    println!(
        "isogeny chain at roots ({},{},{}), convention {}, levels <= {}",
        s.alphas[0],
        s.alphas[1],
        s.alphas[2],
        s.convention.name(),
        s.max_level
    );
    for level in 1..=s.max_level {
        println!("level {level}:");
        for cv in ch.level_vertices(level) {
            let c = cv.curve.lift_to(ct)?;
            println!(
                "  {:<10} value {:<24} curve Y^2 = X^3 + ({})X^2 + ({})X",
                cv.vertex.path_string(),
                ct.fmt_elem(&ct.lift(&cv.a)?),
                ct.fmt_elem(&c.c2),
                ct.fmt_elem(&c.c1)
            );
        }
    }
    println!(
        "shared tower degree over the base: {}",
        1u64 << (ct.height() - t.height())
    );
    Ok(0)
}

fn cmd_torsion(s: &Setup) -> Result<i32, Error> {
    if s.mode == Mode::Generic {
        return Err(Error::Config(
            "torsion printing is specialized-only; generic torsion facts run inside \
             `verify --mode generic`"
                .into(),
        ));
    }
    let t = TowerField::over(RatField);
    let al = [
        t.from_i64(s.alphas[0]),
        t.from_i64(s.alphas[1]),
        t.from_i64(s.alphas[2]),
    ];
    let lvl = build_division_field(&t, &al, s.max_level)?;
    let ft = &lvl.field.tower;
    println!(
        "2^{}-division field of y^2 = (x-{})(x-{})(x-{})",
        s.max_level, s.alphas[0], s.alphas[1], s.alphas[2]
    );
    println!(
        "degree over Q: {}   points: {}",
        lvl.field.degree(),
        lvl.points.len()
    );
    println!("adjunctions:");
    for line in lvl.field.describe() {
        println!("  {line}");
    }
    println!("basis:");
    for p in &lvl.basis {
        println!("  {}", p.fmt_with(ft));
    }
    Ok(0)
}

fn cmd_verify(
    s: &Setup,
    claim_list: Option<&str>,
    long: bool,
    out: Option<&str>,
    seed: u64,
) -> Result<i32, Error> {
    let selected: Vec<String> = match claim_list {
        Some(list) => {
            let mut ids = Vec::new();
            for raw in list.split(',') {
                let id = raw.trim();
                if id.is_empty() {
                    continue;
                }
                if claims::find(id).is_none() {
                    return Err(Error::Config(format!(
                        "unknown claim id '{id}' (known: {})",
                        claims::all_ids().join(", ")
                    )));
                }
                ids.push(id.to_string());
            }
            if ids.is_empty() {
                return Err(Error::Config("--claims selected nothing".into()));
            }
            ids
        }
        None => {
            let mut ids: Vec<String> = claims::default_ids()
                .into_iter()
                .map(String::from)
                .collect();
            if long {
                ids.extend(
                    claims::all_ids()
                        .into_iter()
                        .filter(|id| claims::find(id).map(|c| c.long).unwrap_or(false))
                        .map(String::from),
                );
            }
            ids
        }
    };

    let verdicts: Vec<Verdict> = selected
        .par_iter()
        .map(|id| match claims::run(id, s) {
            Ok(v) => v,
            Err(e) => {
                let info = claims::find(id).expect("validated above");
                let mut v = Verdict::new(id, info.summary, s.mode.name(), s.max_level);
                v.require(false, format!("claim aborted: {e}"));
                v
            }
        })
        .collect();

    print!("{}", report::human_table(&verdicts));
    let config = report::config_json(s, &selected, seed, long);
    let report = report::report_json(config, &verdicts);
    let rendered = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Internal(format!("report serialization failed: {e}")))?;
    match out {
        Some(path) => {
            std::fs::write(path, rendered.as_bytes())
                .map_err(|e| Error::Config(format!("cannot write report to {path}: {e}")))?;
            println!("report written to {path}");
        }
        None => println!("{rendered}"),
    }
    let failed = verdicts.iter().filter(|v| v.status == "fail").count();
    Ok(if failed > 0 { 1 } else { 0 })
}
