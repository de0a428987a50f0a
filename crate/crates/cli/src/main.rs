mod cache;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hurwitz_core::bounds::{sweep_row, SweepValues};
use hurwitz_core::dot::to_dot;
use hurwitz_core::error::HurwitzError;
use hurwitz_core::partitions::{branch_count, partitions_of, Partition};
use hurwitz_core::realtrop::{enumerate_colourings, real_profile, Splitting};
use hurwitz_core::symgroup::{self, Budget, Strategy, DEFAULT_BUDGET};
use hurwitz_core::tropical::{enumerate_covers_with, tropical_complex_hurwitz_with, SweepOrder};
use hurwitz_core::value::HurwitzValue;
use hurwitz_core::zigzag::{classify_cover, in_excluded_family, verify_bounds_with, CoverKind, Route};

use cache::{Cache, Key};

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Exact complex and real double Hurwitz numbers")]
struct Cli {
    /// Search budget in nodes per computation.
    #[arg(long, env = "HURWITZ_BUDGET", default_value_t = DEFAULT_BUDGET, global = true)]
    budget: u64,
    /// JSON-lines file for caching results.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Instance {
    #[arg(long, default_value_t = 0)]
    g: u32,
    /// Ramification over 0, e.g. "[3,1]".
    #[arg(long)]
    lambda: Partition,
    /// Ramification over ∞.
    #[arg(long)]
    mu: Partition,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Group,
    Tropical,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Zigzag,
    Effective,
    Other,
}

#[derive(Subcommand)]
enum Cmd {
    /// Complex double Hurwitz number.
    Hurwitz {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, value_enum, default_value = "group")]
        route: RouteArg,
    },
    /// Real double Hurwitz numbers, for one s, one splitting, or every s.
    Real {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, conflicts_with = "splitting")]
        s: Option<i64>,
        /// Positive branch points, e.g. "1,3,4".
        #[arg(long)]
        splitting: Option<String>,
        #[arg(long, value_enum, default_value = "group")]
        route: RouteArg,
    },
    /// Checks Z ≤ E ≤ H^ℝ(s) ≤ H^ℂ and the parities, printing JSON.
    Verify {
        #[arg(long, default_value_t = 0)]
        g: u32,
        #[arg(long, required_unless_present = "all_small")]
        lambda: Option<Partition>,
        #[arg(long, required_unless_present = "all_small")]
        mu: Option<Partition>,
        /// Every instance with d ≤ 4 and r ≤ 5.
        #[arg(long)]
        all_small: bool,
        #[arg(long, value_enum, default_value = "tropical")]
        route: RouteArg,
    },
    /// Writes one DOT file per cover.
    Render {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        /// One file per colouring instead of per cover.
        #[arg(long)]
        colourings: bool,
    },
    /// Counts for ((λ, 1^m), (μ, 1^m)) with m = 0..=m_max, as CSV.
    Sweep {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        csv: PathBuf,
    },
}

enum Failure {
    Hurwitz(HurwitzError),
    Io(String),
}

impl From<HurwitzError> for Failure {
    fn from(e: HurwitzError) -> Self {
        Failure::Hurwitz(e)
    }
}

type Run = Result<u8, Failure>;

fn io_err(path: &std::path::Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

struct Ctx {
    budget: u64,
    cache: Option<Cache>,
}

impl Ctx {
    fn budget(&self) -> Budget {
        Budget::new(self.budget)
    }

    /// Looks a value up in the cache or computes and stores it.
    fn cached<T: ToString>(
        &mut self,
        key: Key,
        parse: impl Fn(&str) -> Option<T>,
        compute: impl FnOnce(&Budget) -> Result<T, HurwitzError>,
    ) -> Result<T, Failure> {
        if let Some(v) = self.cache.as_ref().and_then(|c| c.get(&key)).and_then(&parse) {
            return Ok(v);
        }
        let budget = self.budget();
        let v = compute(&budget)?;
        if let Some(c) = self.cache.as_mut() {
            c.put(key, v.to_string(), budget.used())
                .map_err(|e| Failure::Io(format!("cache: {e}")))?;
        }
        Ok(v)
    }
}

fn key(quantity: &str, inst: &Instance, split: Option<String>, m: Option<usize>) -> Key {
    Key {
        quantity: quantity.into(),
        g: inst.g,
        lambda: inst.lambda.to_string(),
        mu: inst.mu.to_string(),
        split,
        m,
    }
}

fn complex(ctx: &mut Ctx, inst: &Instance, route: RouteArg) -> Result<HurwitzValue, Failure> {
    let i = inst.clone();
    match route {
        RouteArg::Tropical => ctx.cached(key("complex-tropical", inst, None, None), |s| s.parse().ok(), |b| {
            tropical_complex_hurwitz_with(i.g, &i.lambda, &i.mu, b)
        }),
        _ => ctx.cached(key("complex-group", inst, None, None), |s| s.parse().ok(), |b| {
            symgroup::complex_hurwitz_with(i.g, &i.lambda, &i.mu, Strategy::Memoized, b)
        }),
    }
}

fn cmd_hurwitz(ctx: &mut Ctx, inst: Instance, route: RouteArg) -> Run {
    if route == RouteArg::Both {
        let a = complex(ctx, &inst, RouteArg::Group)?;
        let b = complex(ctx, &inst, RouteArg::Tropical)?;
        if a == b {
            println!("{a} == {b} OK");
            Ok(0)
        } else {
            println!("{a} != {b} MISMATCH");
            Ok(1)
        }
    } else {
        println!("{}", complex(ctx, &inst, route)?);
        Ok(0)
    }
}

fn real_value(ctx: &mut Ctx, inst: &Instance, s: i64, route: RouteArg) -> Result<HurwitzValue, Failure> {
    let i = inst.clone();
    if route == RouteArg::Tropical {
        let r = branch_count(i.g, &i.lambda, &i.mu)?;
        if s < 0 || s > r {
            return Err(HurwitzError::SplitOutOfRange { s, r: r.max(0) as usize }.into());
        }
        let split = Splitting::first(r as usize, s as usize)?;
        return ctx.cached(key("real-tropical", inst, Some(split.to_string()), None), |v| v.parse().ok(), |b| {
            Ok(real_profile(i.g, &i.lambda, &i.mu, b)?.value(&split))
        });
    }
    ctx.cached(key("real-group", inst, Some(s.to_string()), None), |v| v.parse().ok(), |b| {
        symgroup::real_hurwitz_with(i.g, &i.lambda, &i.mu, s, Strategy::Memoized, b)
    })
}

fn cmd_real(ctx: &mut Ctx, inst: Instance, s: Option<i64>, splitting: Option<String>, route: RouteArg) -> Run {
    let r = branch_count(inst.g, &inst.lambda, &inst.mu)?;
    if let Some(text) = splitting {
        let split = Splitting::parse(r.max(0) as usize, &text)?;
        let i = inst.clone();
        let v = ctx.cached(key("real-tropical", &inst, Some(split.to_string()), None), |v| v.parse().ok(), |b| {
            Ok(real_profile(i.g, &i.lambda, &i.mu, b)?.value(&split))
        })?;
        println!("{v}");
        return Ok(0);
    }
    let route = if route == RouteArg::Both { RouteArg::Group } else { route };
    if let Some(s) = s {
        println!("{}", real_value(ctx, &inst, s, route)?);
        return Ok(0);
    }
    println!("s\tH(s)\tH(r-s)");
    for s in 0..=r {
        let a = real_value(ctx, &inst, s, route)?;
        let b = real_value(ctx, &inst, r - s, route)?;
        println!("{s}\t{a}\t{b}");
    }
    Ok(0)
}

fn route_of(r: RouteArg) -> Route {
    match r {
        RouteArg::Group => Route::Group,
        _ => Route::Tropical,
    }
}

fn cmd_verify(ctx: &Ctx, g: u32, lambda: Option<Partition>, mu: Option<Partition>, all_small: bool, route: RouteArg) -> Run {
    let json = |v: &serde_json::Value| serde_json::to_string_pretty(v).expect("json value");
    if all_small {
        let mut n = 0;
        let mut failures = Vec::new();
        for d in 1..=4 {
            for l in partitions_of(d) {
                for m in partitions_of(d) {
                    for g in 0..=3 {
                        let r = branch_count(g, &l, &m)?;
                        if !(1..=5).contains(&r) || in_excluded_family(&l, &m) {
                            continue;
                        }
                        n += 1;
                        let rep = verify_bounds_with(g, &l, &m, route_of(route), &ctx.budget())?;
                        if !(rep.chain_ok && rep.parity_ok) {
                            failures.push(rep);
                        }
                    }
                }
            }
        }
        let summary = serde_json::json!({ "instances": n, "failures": failures });
        println!("{}", json(&summary));
        return Ok(u8::from(!failures.is_empty()));
    }
    let (lambda, mu) = (lambda.unwrap_or_default(), mu.unwrap_or_default());
    let rep = verify_bounds_with(g, &lambda, &mu, route_of(route), &ctx.budget())?;
    println!("{}", json(&serde_json::to_value(&rep).expect("report serialises")));
    Ok(u8::from(!(rep.chain_ok && rep.parity_ok)))
}

fn cmd_render(ctx: &Ctx, inst: Instance, out: PathBuf, class: Option<ClassArg>, colourings: bool) -> Run {
    let covers = enumerate_covers_with(inst.g, &inst.lambda, &inst.mu, SweepOrder::Forward, &ctx.budget())?;
    fs::create_dir_all(&out).map_err(io_err(&out))?;
    let mut written = 0;
    for (i, c) in covers.iter().enumerate() {
        let kind = classify_cover(c).kind;
        let keep = match class {
            None => true,
            Some(ClassArg::Zigzag) => kind == CoverKind::Zigzag,
            Some(ClassArg::Effective) => kind == CoverKind::EffectiveNonZigzag,
            Some(ClassArg::Other) => kind == CoverKind::Other,
        };
        if !keep {
            continue;
        }
        let mut files = Vec::new();
        if colourings {
            for (j, rho) in enumerate_colourings(c).iter().enumerate() {
                let name = format!("cover_{i:03}_rho_{j:02}");
                files.push((name.clone(), to_dot(c, &name, Some(rho))));
            }
        } else {
            let name = format!("cover_{i:03}");
            files.push((name.clone(), to_dot(c, &name, None)));
        }
        for (name, text) in files {
            let path = out.join(format!("{name}.dot"));
            fs::write(&path, text).map_err(io_err(&path))?;
            written += 1;
        }
    }
    println!("wrote {written} DOT file(s) to {}", out.display());
    Ok(0)
}

fn cmd_sweep(ctx: &mut Ctx, inst: Instance, m_max: usize, csv_path: PathBuf) -> Run {
    branch_count(inst.g, &inst.lambda, &inst.mu)?;
    let mut rows: Vec<(usize, Option<SweepValues>)> = Vec::new();
    for m in 0..=m_max {
        let k = key("sweep-row", &inst, None, Some(m));
        let hit = ctx
            .cache
            .as_ref()
            .and_then(|c| c.get(&k))
            .and_then(|s| serde_json::from_str::<SweepValues>(s).ok());
        let v = match hit {
            Some(v) => Some(v),
            None => {
                let budget = ctx.budget();
                match sweep_row(inst.g, &inst.lambda, &inst.mu, m, &budget) {
                    Ok(v) => {
                        if let Some(c) = ctx.cache.as_mut() {
                            let text = serde_json::to_string(&v).expect("row serialises");
                            c.put(k, text, budget.used()).map_err(|e| Failure::Io(format!("cache: {e}")))?;
                        }
                        Some(v)
                    }
                    Err(HurwitzError::BudgetExceeded(_)) => None,
                    Err(e) => return Err(e.into()),
                }
            }
        };
        rows.push((m, v));
    }
    let s_max = rows
        .iter()
        .filter_map(|(_, v)| v.as_ref().map(|v| v.h_real.len()))
        .max()
        .unwrap_or(0);
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| Failure::Io(format!("{}: {e}", csv_path.display())))?;
    let mut header: Vec<String> = ["m", "Z", "Zprime", "E", "H_complex"].iter().map(|s| s.to_string()).collect();
    header.extend((0..s_max).map(|s| format!("H_real_s{s}")));
    header.push("log_ratio_E".into());
    header.push("log_ratio_HC".into());
    let csv_err = |e: csv::Error| Failure::Io(format!("{}: {e}", csv_path.display()));
    w.write_record(&header).map_err(csv_err)?;
    let opt = |x: Option<f64>| x.map(|x| format!("{x:.6}")).unwrap_or_default();
    let complete = rows.iter().take_while(|(_, v)| v.is_some()).last().map(|(m, _)| *m);
    for (m, v) in &rows {
        let mut rec = vec![m.to_string()];
        match v {
            Some(v) => {
                rec.extend([v.z.to_string(), v.zprime.to_string(), v.e.to_string(), v.h_complex.to_string()]);
                rec.extend((0..s_max).map(|s| v.h_real.get(s).map(|x| x.to_string()).unwrap_or_default()));
                rec.push(opt(v.log_ratio_e));
                rec.push(opt(v.log_ratio_hc));
            }
            None => rec.extend(std::iter::repeat_n("budget".to_string(), header.len() - 1)),
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(&csv_path))?;
    let failing = rows
        .iter()
        .filter(|(_, v)| v.as_ref().is_some_and(|v| v.chain_ok == Some(false)))
        .count();
    match complete {
        Some(m) => println!("rows computed through m = {m}; {failing} rows fail the chain"),
        None => println!("no rows computed within budget"),
    }
    Ok(u8::from(failing > 0))
}

fn run(cli: Cli) -> Run {
    let cache = match &cli.cache {
        Some(p) => Some(Cache::open(p).map_err(io_err(p))?),
        None => None,
    };
    let mut ctx = Ctx { budget: cli.budget, cache };
    match cli.cmd {
        Cmd::Hurwitz { inst, route } => cmd_hurwitz(&mut ctx, inst, route),
        Cmd::Real { inst, s, splitting, route } => cmd_real(&mut ctx, inst, s, splitting, route),
        Cmd::Verify { g, lambda, mu, all_small, route } => cmd_verify(&ctx, g, lambda, mu, all_small, route),
        Cmd::Render { inst, out, class, colourings } => cmd_render(&ctx, inst, out, class, colourings),
        Cmd::Sweep { inst, m_max, csv } => cmd_sweep(&mut ctx, inst, m_max, csv),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Hurwitz(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, HurwitzError::BudgetExceeded(_)) { 3 } else { 2 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
