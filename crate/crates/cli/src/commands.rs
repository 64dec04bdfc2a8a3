//! One function per subcommand. Each reads its parameters through [`Ctx`],
//! which records them for the CSV comment line, then writes its tables.

use std::fmt::Display;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use scaling_entropy::algebra::{sl2_for_order, FiniteGroup, GroupLaw, IntegerLattice};
use scaling_entropy::constructions::{
    claim52_experiment, difference_graph, gap_experiment, greedy_coloring, is_proper, product_growth_experiment,
    separated_family, transversal_experiment, GapRow, InvariantRecipe, TOWER_METRIC_CAP,
};
use scaling_entropy::dynamics::{bernoulli_shift, phi_profile, ActionTable, FolnerFamily, PhiRow};
use scaling_entropy::entropy::{eps_entropy, EntropyOptions, EpsEntropyResult, EXACT_ATOM_CAP};
use scaling_entropy::spaces::{read_masses_csv, read_semimetric_csv, FiniteProbSpace, Partition, Semimetric};
use scaling_entropy::suites::{
    averaging_suite, bernoulli_suite, coloring_suite, lemma_lowerbound_suite, lemma_mnorm_suite,
    lemma_partitions_suite, sandwich_suite, SuiteReport,
};
use scaling_entropy::table::{fmt_f64, CsvTable};
use scaling_entropy::VERSION;

use crate::config::Params;

pub const DEFAULT_SEED: u64 = 1;
const DEFAULT_EPS: [f64; 3] = [0.05, 0.1, 0.25];
const DEFAULT_NODE_LIMIT: u64 = 5_000_000;
/// The transversal runs at 24 and 120 atoms are solved exactly by default.
const DEFAULT_TRANSVERSAL_EXACT_CAP: usize = 120;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Entropy,
    Average,
    TowerGap,
    Claim52,
    Growth,
    Coloring,
    VerifyLemmas,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Entropy => "entropy",
            Command::Average => "average",
            Command::TowerGap => "tower-gap",
            Command::Claim52 => "claim52",
            Command::Growth => "growth",
            Command::Coloring => "coloring",
            Command::VerifyLemmas => "verify-lemmas",
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    SuiteFailure,
}

/// Parameters with their defaults, echoed in the order they are read.
struct Ctx {
    params: Params,
    command: &'static str,
    echo: Vec<String>,
    out: PathBuf,
}

fn list<T: Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Ctx {
    fn note(&mut self, key: &str, value: impl Display) {
        self.echo.push(format!("{key}={value}"));
    }

    fn seed(&mut self) -> u64 {
        let s = self.params.seed.unwrap_or(DEFAULT_SEED);
        self.note("seed", s);
        s
    }

    fn eps(&mut self, default: &[f64]) -> Vec<f64> {
        let e = self.params.eps.clone().unwrap_or_else(|| default.to_vec());
        self.note("eps", list(&e));
        e
    }

    fn cap(&mut self) -> usize {
        let c = self.params.cap_atoms.unwrap_or(TOWER_METRIC_CAP);
        self.note("cap_atoms", c);
        c
    }

    fn entropy_opts(&mut self) -> EntropyOptions {
        let exact_cap = self.params.exact_cap.unwrap_or(EXACT_ATOM_CAP);
        let node_limit = self.params.node_limit.unwrap_or(DEFAULT_NODE_LIMIT);
        self.note("exact_cap", exact_cap);
        self.note("node_limit", node_limit);
        EntropyOptions { exact_cap, node_limit }
    }

    fn value<T: Clone + Display>(&mut self, key: &str, v: Option<T>, default: T) -> T {
        let v = v.unwrap_or(default);
        self.note(key, v.clone());
        v
    }

    fn comment(&self) -> String {
        format!("selab {VERSION} {} {}", self.command, self.echo.join(" "))
    }

    fn write(&self, name: &str, table: &CsvTable) -> Result<()> {
        std::fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        let path = self.out.join(name);
        let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        table.write(std::io::BufWriter::new(file), Some(&self.comment()))?;
        println!("wrote {} ({} rows)", path.display(), table.rows.len());
        Ok(())
    }
}

pub fn run(command: Command, params: Params) -> Result<Outcome> {
    let out = params.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut ctx = Ctx {
        params,
        command: command.name(),
        echo: Vec::new(),
        out,
    };
    match command {
        Command::Entropy => entropy(&mut ctx),
        Command::Average => average(&mut ctx),
        Command::TowerGap => tower_gap(&mut ctx),
        Command::Claim52 => claim52(&mut ctx),
        Command::Growth => growth(&mut ctx),
        Command::Coloring => coloring(&mut ctx),
        Command::VerifyLemmas => verify_lemmas(&mut ctx),
    }
}

fn entropy_row(r: &EpsEntropyResult) -> Vec<String> {
    vec![
        fmt_f64(r.epsilon),
        r.lower_cells.to_string(),
        r.upper_cells.to_string(),
        fmt_f64(r.lower_bits),
        fmt_f64(r.upper_bits),
        r.exact.to_string(),
    ]
}

/// Atom count of a semimetric CSV from its header row.
fn metric_atoms(text: &str) -> Result<usize> {
    let header = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .context("semimetric CSV is empty")?;
    Ok(header.split(',').count().saturating_sub(1))
}

fn entropy(ctx: &mut Ctx) -> Result<Outcome> {
    ctx.seed();
    let Some(path) = ctx.params.metric.clone() else {
        bail!("entropy needs --metric PATH");
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let space = match ctx.params.masses.clone() {
        Some(m) => read_masses_csv(std::fs::File::open(&m).with_context(|| format!("opening {}", m.display()))?)?,
        None => FiniteProbSpace::uniform(metric_atoms(&text)?)?,
    };
    let cap = ctx.cap();
    if space.len() > cap {
        return Err(scaling_entropy::Error::budget("semimetric atoms", space.len() as u128, cap as u128).into());
    }
    let rho = read_semimetric_csv(text.as_bytes(), space)?;
    let eps = ctx.eps(&DEFAULT_EPS);
    let opts = ctx.entropy_opts();
    let results: Vec<EpsEntropyResult> = eps
        .par_iter()
        .map(|&e| eps_entropy(&rho, e, &opts))
        .collect::<scaling_entropy::Result<_>>()?;
    let mut table = CsvTable::new(&["epsilon", "lower_cells", "upper_cells", "lower_bits", "upper_bits", "exact"]);
    let mut cells = CsvTable::new(&["epsilon", "atom", "cell"]);
    for r in &results {
        table.push(entropy_row(r));
        if let Some(w) = &r.witness {
            for (atom, cell) in w.cell_ids(rho.len()).into_iter().enumerate() {
                cells.push(vec![fmt_f64(r.epsilon), atom.to_string(), cell.to_string()]);
            }
        }
    }
    ctx.write("entropy.csv", &table)?;
    ctx.write("entropy_decomposition.csv", &cells)?;
    Ok(Outcome::Success)
}

fn parse_group(spec: &str, cap: usize) -> Result<Arc<FiniteGroup>> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let n: u64 = arg.parse().with_context(|| format!("bad group spec {spec:?}"))?;
    Ok(Arc::new(match kind {
        "cyclic" => FiniteGroup::cyclic(n as usize)?,
        "sl2" => sl2_for_order(n, cap as u64)?.1,
        _ => bail!("unknown group {spec:?} (expected cyclic:N or sl2:Q)"),
    }))
}

fn average(ctx: &mut Ctx) -> Result<Outcome> {
    let seed = ctx.seed();
    let cap = ctx.cap();
    let spec = ctx.value("group", ctx.params.group.clone(), "cyclic:8".to_string());
    let kind = ctx.value("action", ctx.params.action.clone(), "bernoulli".to_string());
    let alphabet = ctx.value("alphabet", ctx.params.alphabet, 2);
    let group = parse_group(&spec, cap)?;
    let (action, xi) = match kind.as_str() {
        "bernoulli" => {
            let shift = bernoulli_shift(group.clone(), alphabet, cap as u64)?;
            (shift.action, shift.coordinate)
        }
        "regular" => {
            let action = ActionTable::left_regular(group.clone())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let labels: Vec<usize> = (0..group.order()).map(|_| rng.gen_range(0..alphabet)).collect();
            let xi = Partition::new(action.space().clone(), &labels)?;
            (action, xi)
        }
        other => bail!("unknown action {other:?} (expected bernoulli or regular)"),
    };
    if action.space().len() > cap {
        return Err(scaling_entropy::Error::budget("atoms", action.space().len() as u128, cap as u128).into());
    }
    let horizon = ctx.value("horizon", ctx.params.horizon, group.order().min(8));
    if horizon > group.order() {
        bail!("horizon {horizon} exceeds |G| = {}", group.order());
    }
    let eps = ctx.eps(&DEFAULT_EPS);
    let opts = ctx.entropy_opts();
    let sizes: Vec<usize> = (1..=horizon).collect();
    let family = FolnerFamily::prefixes(group, &sizes)?;
    let rows = phi_profile(&action, &family, &Semimetric::cut(&xi), horizon, &eps, &opts)?;
    ctx.write("average.csv", &PhiRow::table(&rows))?;
    Ok(Outcome::Success)
}

fn tower_gap(ctx: &mut Ctx) -> Result<Outcome> {
    ctx.seed();
    let cap = ctx.cap();
    let p = ctx.value("p", ctx.params.p, 3);
    let depth = ctx.value("depth", ctx.params.depth, 2);
    let eps = ctx.eps(&DEFAULT_EPS);
    let opts = ctx.entropy_opts();
    let report = gap_experiment(p, depth, &eps, &opts, cap)?;
    ctx.write("tower_gap.csv", &GapRow::table(&report.phi_rows))?;
    ctx.write("tower_gap_transversal.csv", &GapRow::table(&report.transversal_rows))?;
    for (n, l1) in report.transversal_l1.iter().enumerate() {
        println!("level {}: L1 mean of averaged transversal cut = {l1}", n + 1);
    }
    Ok(Outcome::Success)
}

fn claim52(ctx: &mut Ctx) -> Result<Outcome> {
    let seed = ctx.seed();
    let cap = ctx.cap();
    let qs = ctx.params.q.clone().unwrap_or_else(|| vec![3, 5, 7, 9]);
    ctx.note("q", list(&qs));
    let recipe_name = ctx.value("recipe", ctx.params.recipe.clone(), "word".to_string());
    let recipe = InvariantRecipe::parse(&recipe_name, seed)?;
    let eps = ctx.eps(&[0.25]);
    let opts = ctx.entropy_opts();
    let transversal_opts = EntropyOptions {
        exact_cap: ctx.value(
            "transversal_exact_cap",
            ctx.params.transversal_exact_cap,
            DEFAULT_TRANSVERSAL_EXACT_CAP,
        ),
        ..opts
    };
    let mut rows = CsvTable::new(&scaling_entropy::constructions::Claim52Report::HEADER);
    let mut transversal = CsvTable::new(&scaling_entropy::constructions::TransversalReport::HEADER);
    for &e in &eps {
        let report = claim52_experiment(&qs, e, recipe, &opts, cap)?;
        rows.rows.extend(report.table().rows);
        match report.c_emp {
            Some(c) => println!("ε = {e}: empirical c = min H/log2 q = {c}"),
            None => println!("ε = {e}: no row satisfies diam > 3ε"),
        }
        let lower = transversal_experiment(&qs, e, &transversal_opts, cap)?;
        transversal.rows.extend(lower.table().rows);
        println!("ε = {e}: transversal empirical c = {}", lower.c_emp);
    }
    ctx.write("claim52.csv", &rows)?;
    ctx.write("transversal.csv", &transversal)?;
    Ok(Outcome::Success)
}

fn growth(ctx: &mut Ctx) -> Result<Outcome> {
    let seed = ctx.seed();
    let ps = ctx.params.ps.clone().unwrap_or_else(|| vec![3, 5, 7]);
    ctx.note("ps", list(&ps));
    let trials = ctx.value("trials", ctx.params.trials, 20);
    let report = product_growth_experiment(&ps, trials, seed)?;
    ctx.write("growth.csv", &report.table())?;
    match report.fitted_delta {
        Some(d) => println!("fitted exponent δ = {d}"),
        None => println!("every triple product covered the group"),
    }
    println!("trials with A³ ≠ G and |A³| ≤ |A|: {}", report.violations().len());
    Ok(Outcome::Success)
}

struct ColoringRow {
    window: usize,
    forbidden: usize,
    max_degree: usize,
    colors: usize,
    blocks: usize,
    proper: bool,
    separated: bool,
}

fn color<G: GroupLaw>(group: &G, window: &[G::Elem], forbidden: &[G::Elem]) -> Result<ColoringRow> {
    let graph = difference_graph(group, window, forbidden)?;
    let colors = greedy_coloring(&graph);
    let family = separated_family(group, window, forbidden)?;
    Ok(ColoringRow {
        window: graph.vertices.len(),
        forbidden: forbidden.len(),
        max_degree: graph.max_degree(),
        colors: colors.iter().max().map_or(0, |c| c + 1),
        blocks: family.blocks.len(),
        proper: is_proper(&graph, &colors),
        separated: family.verify(group).is_ok(),
    })
}

fn distinct<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort_unstable();
    v.dedup();
    v
}

fn coloring(ctx: &mut Ctx) -> Result<Outcome> {
    let seed = ctx.seed();
    let cap = ctx.cap();
    let spec = ctx.value("group", ctx.params.group.clone(), "z".to_string());
    let size = ctx.value("window", ctx.params.window, 20);
    let k = ctx.value("forbidden", ctx.params.forbidden, 2);
    let trials = ctx.value("trials", ctx.params.trials, 20);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = size as i64;
    let mut rows = Vec::with_capacity(trials);
    for _ in 0..trials {
        let row = match spec.as_str() {
            "z" => {
                let w: Vec<[i64; 1]> = (0..size).map(|_| [rng.gen_range(-span..=span)]).collect();
                let f: Vec<[i64; 1]> =
                    distinct((0..k).map(|_| [rng.gen_range(1..=span.max(1)) * [-1, 1][rng.gen_range(0..2)]]).collect());
                color(&IntegerLattice::<1>, &w, &f)?
            }
            "z2" => {
                let r = (span as f64).sqrt().ceil() as i64;
                let w: Vec<[i64; 2]> = (0..size).map(|_| [rng.gen_range(-r..=r), rng.gen_range(-r..=r)]).collect();
                let f: Vec<[i64; 2]> = distinct(
                    (0..k)
                        .map(|_| [rng.gen_range(-2..=2), rng.gen_range(-2..=2)])
                        .filter(|v| *v != [0, 0])
                        .collect(),
                );
                color(&IntegerLattice::<2>, &w, &f)?
            }
            other => {
                let group = parse_group(other, cap)?;
                let all: Vec<usize> = group.elements().collect();
                let others: Vec<usize> = all.iter().copied().filter(|&g| g != group.identity()).collect();
                let w: Vec<usize> = all.choose_multiple(&mut rng, size.min(all.len())).copied().collect();
                let f: Vec<usize> = others.choose_multiple(&mut rng, k.min(others.len())).copied().collect();
                color(group.as_ref(), &w, &f)?
            }
        };
        rows.push(row);
    }
    let mut table = CsvTable::new(&[
        "trial", "window_size", "forbidden_size", "max_degree", "colors", "blocks", "bound", "proper", "separated",
    ]);
    for (t, r) in rows.iter().enumerate() {
        table.push(vec![
            t.to_string(),
            r.window.to_string(),
            r.forbidden.to_string(),
            r.max_degree.to_string(),
            r.colors.to_string(),
            r.blocks.to_string(),
            (2 * r.forbidden + 1).to_string(),
            r.proper.to_string(),
            r.separated.to_string(),
        ]);
    }
    ctx.write("coloring.csv", &table)?;
    let bad = rows
        .iter()
        .filter(|r| !(r.proper && r.separated && r.colors <= 2 * r.forbidden + 1))
        .count();
    println!("{bad} of {trials} colorings violate the separated-family invariants");
    Ok(Outcome::Success)
}

type Suite = (&'static str, usize, Box<dyn Fn(usize, u64) -> scaling_entropy::Result<SuiteReport> + Sync>);

fn verify_lemmas(ctx: &mut Ctx) -> Result<Outcome> {
    let seed = ctx.seed();
    let trials = ctx.params.trials;
    if let Some(t) = trials {
        ctx.note("trials", t);
    }
    let suites: Vec<Suite> = vec![
        ("eps_entropy_sandwich", 500, Box::new(sandwich_suite)),
        ("mixture_lower_bound", 200, Box::new(lemma_lowerbound_suite)),
        ("partition_estimate", 200, Box::new(lemma_partitions_suite)),
        ("mnorm_stability", 100, Box::new(lemma_mnorm_suite)),
        ("averaging_identities", 100, Box::new(averaging_suite)),
        ("coloring", 50, Box::new(coloring_suite)),
        ("bernoulli_additivity", 1, Box::new(|_, _| bernoulli_suite())),
    ];
    let reports: Vec<SuiteReport> = suites
        .par_iter()
        .enumerate()
        .map(|(i, (_, default, f))| f(trials.unwrap_or(*default), seed.wrapping_add(i as u64)))
        .collect::<scaling_entropy::Result<_>>()?;
    for r in &reports {
        println!(
            "{:<22} {:>5} trials  {:>3} violations  {}",
            r.name,
            r.trials,
            r.violations,
            if r.passed() { "PASS" } else { "FAIL" }
        );
    }
    ctx.write("verify_lemmas.csv", &SuiteReport::table(&reports))?;
    Ok(if reports.iter().all(SuiteReport::passed) {
        Outcome::Success
    } else {
        Outcome::SuiteFailure
    })
}
