use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use galorb::altcount::{frobenius_rank, prop8_lower_bound, AltCountError, Prop8Bound, MAX_PARTITION_N};
use galorb::chartab::{analyze_table, brauer_crosscheck, parse_table, CharReport, Crosscheck, TableError};
use galorb::classtheory::{analyze, GaloisReport};
use galorb::matgroup::{
    char_poly, class_lower_bound, coprime_power_charpoly_count, element_order, random_element_search, singer_element,
    unit_orbit_count, ClassBound, MatError, MatrixFile, DEFAULT_ORDER_BOUND,
};
use galorb::permgroup::{alternating_class_structure, conjugacy_classes, ClassLimits, GroupSpec, PermError};
use galorb::screening::{exception_set, exceptional_screen, parse_torus_records, ExceptionReport, Family, TorusFlag};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "galorb", version, about = "Galois-orbit invariants of finite groups")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Group-order guard for class computations, element-order bound for matrices.
    #[arg(long, global = true)]
    max_order: Option<u64>,
    /// Screening box as `NxQ`.
    #[arg(long = "box", global = true, default_value = "40x64")]
    screen_box: String,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classes, rank and f from permutation generators.
    AnalyzePerm {
        /// Generator file (one permutation per line in cycle notation).
        #[arg(required_unless_present = "alternating")]
        input: Option<PathBuf>,
        /// Use the cycle-type class structure of A_n instead of a file.
        #[arg(long, conflicts_with = "input")]
        alternating: Option<usize>,
    },
    /// Rank and f from a character table, optionally checked against a group.
    AnalyzeTable {
        table: PathBuf,
        /// Generator file of the same group, columns in the canonical class order.
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Frobenius-criterion rank of A_n for `n` or a range `lo..hi`.
    AnRank { range: String },
    /// Exception sets and closure certificates for the classical families.
    Screen {
        /// Family tag or `all`.
        #[arg(default_value = "all")]
        family: String,
        /// JSON-lines torus records to screen instead of the families.
        #[arg(long)]
        torus: Option<PathBuf>,
        /// Field size for the torus records.
        #[arg(long, requires = "torus")]
        q: Option<u64>,
    },
    /// Coprime-power characteristic polynomial counts.
    Charpoly {
        #[command(subcommand)]
        mode: CharpolyMode,
    },
}

#[derive(Subcommand, Debug)]
enum CharpolyMode {
    /// Companion matrix of a primitive polynomial of degree `n` over GF(q).
    Singer {
        n: u32,
        q: u64,
        /// Order of the center to divide by.
        #[arg(long, default_value_t = 1)]
        center: u64,
    },
    /// Random search in a matrix group for an element of the target order.
    Search {
        file: PathBuf,
        #[arg(long)]
        target: u64,
        #[arg(long, default_value_t = 1000)]
        attempts: usize,
        #[arg(long, default_value_t = 1)]
        center: u64,
    },
    /// Verdict arithmetic for an externally obtained count.
    Bound {
        #[arg(long)]
        count: u64,
        #[arg(long)]
        center: u64,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure { code: 2, msg: msg.to_string() }
    }
    fn incomplete(msg: impl ToString) -> Self {
        Failure { code: 3, msg: msg.to_string() }
    }
    fn guard(msg: impl ToString) -> Self {
        Failure { code: 4, msg: msg.to_string() }
    }
}

impl From<PermError> for Failure {
    fn from(e: PermError) -> Self {
        match e {
            PermError::Guard { .. } | PermError::DegreeTooLarge(_) => Failure::guard(e),
            PermError::Incomplete { .. } => Failure::incomplete(e),
            _ => Failure::input(e),
        }
    }
}

impl From<MatError> for Failure {
    fn from(e: MatError) -> Self {
        match e {
            MatError::OrderBound(_) | MatError::SingerTooLarge { .. } | MatError::FieldTooLarge(_) => Failure::guard(e),
            MatError::Perm(p) => p.into(),
            _ => Failure::input(e),
        }
    }
}

impl From<AltCountError> for Failure {
    fn from(e: AltCountError) -> Self {
        match e {
            AltCountError::Guard { .. } => Failure::guard(e),
            _ => Failure::input(e),
        }
    }
}

impl From<TableError> for Failure {
    fn from(e: TableError) -> Self {
        Failure::input(e)
    }
}

/// A finished report; `complete` is false when the exit code should be 3.
struct Output {
    text: String,
    json: String,
    complete: bool,
}

impl Output {
    fn new(text: String, value: &impl Serialize, complete: bool) -> Self {
        let json = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
        Output { text, json, complete }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_group(path: &Path) -> Result<GroupSpec, Failure> {
    GroupSpec::parse(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn class_limits(cli: &Cli) -> ClassLimits {
    let mut limits = ClassLimits { seed: cli.seed, ..ClassLimits::default() };
    if let Some(m) = cli.max_order {
        limits.max_order = m as u128;
    }
    limits
}

#[derive(Serialize)]
struct PermReport {
    source: String,
    order: String,
    classes: usize,
    #[serde(flatten)]
    report: GaloisReport,
}

fn galois_text(out: &mut String, r: &GaloisReport, labels: &[String]) {
    let _ = writeln!(out, "n_Q      {}", r.n_q);
    let _ = writeln!(out, "n_R      {}", r.n_r);
    let _ = writeln!(out, "rank     {}", r.rank);
    let _ = writeln!(out, "f        {}", r.f);
    let _ = writeln!(out, "a1, a2   {}, {}", r.a1, r.a2);
    let _ = writeln!(out, "is_cut   {}", r.is_cut);
    let _ = writeln!(out, "families");
    for (fam, c) in r.families.iter().zip(&r.family_contributions) {
        let names: Vec<&str> = fam.iter().map(|&i| labels[i].as_str()).collect();
        let _ = writeln!(out, "  {:<40} +{c}", names.join(" ~ "));
    }
}

fn cmd_analyze_perm(cli: &Cli, input: Option<&Path>, alternating: Option<usize>) -> Result<Output, Failure> {
    let (source, cs) = match (input, alternating) {
        (_, Some(n)) => (format!("A{n}"), alternating_class_structure(n)?),
        (Some(path), None) => {
            let spec = load_group(path)?;
            eprintln!("computing classes on {} points", spec.degree);
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            (name, conjugacy_classes(&spec, &class_limits(cli))?)
        }
        (None, None) => return Err(Failure::input("no group given")),
    };
    let report = analyze(&cs).map_err(Failure::incomplete)?;
    let mut text = String::new();
    let _ = writeln!(text, "group    {source}");
    let _ = writeln!(text, "order    {}", cs.group_order);
    let _ = writeln!(text, "classes  {}", cs.num_classes());
    let labels: Vec<String> = cs.classes.iter().map(|c| c.label.clone()).collect();
    galois_text(&mut text, &report, &labels);
    let rep = PermReport { source, order: cs.group_order.to_string(), classes: cs.num_classes(), report };
    Ok(Output::new(text, &rep, true))
}

#[derive(Serialize)]
struct TableReport {
    #[serde(flatten)]
    report: CharReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    crosscheck: Option<Crosscheck>,
}

fn cmd_analyze_table(cli: &Cli, table: &Path, group: Option<&Path>) -> Result<Output, Failure> {
    let t = parse_table(&read(table)?).map_err(|e| Failure::input(format!("{}: {e}", table.display())))?;
    let report = analyze_table(&t)?;
    let crosscheck = match group {
        Some(path) => {
            let cs = conjugacy_classes(&load_group(path)?, &class_limits(cli))?;
            Some(brauer_crosscheck(&t, &cs)?)
        }
        None => None,
    };
    let mut text = String::new();
    let _ = writeln!(text, "table        {}", report.name);
    let _ = writeln!(text, "h_R          {}", report.h_r);
    let _ = writeln!(text, "n_G          {}", report.n_g);
    let _ = writeln!(text, "rank         {}", report.rank_eq1);
    let _ = writeln!(text, "f            {}", report.f_table);
    let _ = writeln!(text, "b1, b2       {}, {}", report.b1, report.b2);
    let _ = writeln!(text, "cut (fields) {}", report.cut_by_fields);
    let _ = writeln!(text, "column families {:?}", report.column_families);
    let mut complete = true;
    if let Some(c) = &crosscheck {
        complete = c.passed;
        let _ = writeln!(text, "crosscheck   {}", if c.passed { "passed" } else { "FAILED" });
        let _ = writeln!(text, "  row orbits {}, column families {}, Q-classes {}", c.row_orbits, c.column_families, c.q_classes);
        let _ = writeln!(text, "  rank from table {}, from classes {}", c.table_rank, c.class_rank);
        for k in &c.per_k {
            let _ = writeln!(
                text,
                "  k={:<4} fixed rows {:<3} fixed columns {:<3} fixed classes {}",
                k.k, k.fixed_rows, k.fixed_columns, k.fixed_classes
            );
        }
        for d in &c.discrepancies {
            let _ = writeln!(text, "  ! {d}");
        }
    }
    Ok(Output::new(text, &TableReport { report, crosscheck }, complete))
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::input(format!("bad range {s:?}: expected `n` or `lo..hi`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim_start_matches('=').trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct RankRow {
    n: u64,
    frobenius_rank: u64,
    prop8: Option<Prop8Bound>,
}

fn cmd_an_rank(range: &str) -> Result<Output, Failure> {
    let (lo, hi) = parse_range(range)?;
    if hi > MAX_PARTITION_N {
        return Err(AltCountError::Guard { n: hi }.into());
    }
    let mut rows = Vec::new();
    let mut text = format!("{:>4}  {:>12}  {:>12}\n", "n", "rank", "prop8_bound");
    for n in lo..=hi {
        if hi - lo >= 20 && n % 20 == 0 {
            eprintln!("n = {n}");
        }
        let rank = frobenius_rank(n)?;
        let prop8 = if n >= 26 { Some(prop8_lower_bound(n)?) } else { None };
        let bound = prop8.as_ref().map_or("-".to_string(), |b| b.bound.to_string());
        let _ = writeln!(text, "{n:>4}  {rank:>12}  {bound:>12}");
        rows.push(RankRow { n, frobenius_rank: rank, prop8 });
    }
    Ok(Output::new(text, &rows, true))
}

fn parse_box(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::input(format!("bad box {s:?}: expected `NxQ`"));
    let (n, q) = s.split_once(['x', 'X', ',']).ok_or_else(bad)?;
    let (n, q) = (n.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
    if n == 0 || q == 0 {
        return Err(bad());
    }
    Ok((n, q))
}

fn pairs(v: &[(u64, u64)]) -> String {
    v.iter().map(|(n, q)| format!("({n},{q})")).collect::<Vec<_>>().join(" ")
}

fn cmd_screen(cli: &Cli, family: &str, torus: Option<&Path>, q: Option<u64>) -> Result<Output, Failure> {
    if let Some(path) = torus {
        let q = q.ok_or_else(|| Failure::input("--torus needs --q"))?;
        let records = parse_torus_records(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let flags: Vec<TorusFlag> = exceptional_screen(&records, q);
        let mut text = String::new();
        for f in &flags {
            let verdict = match f.witness {
                Some(w) => format!("excluded (record {w})"),
                None => "not excluded".to_string(),
            };
            let _ = writeln!(text, "{:<16} {verdict}", f.group);
        }
        return Ok(Output::new(text, &flags, true));
    }
    let (n_max, q_max) = parse_box(&cli.screen_box)?;
    let families: Vec<Family> = if family.eq_ignore_ascii_case("all") {
        Family::ALL.to_vec()
    } else {
        vec![family.parse().map_err(Failure::input)?]
    };
    let mut reports: Vec<ExceptionReport> = Vec::new();
    let mut text = String::new();
    for fam in families {
        eprintln!("screening {fam} in n <= {n_max}, q <= {q_max}");
        let r = exception_set(fam, n_max, q_max);
        let c = &r.certificate;
        let _ = writeln!(text, "{fam}");
        let _ = writeln!(text, "  exceptions ({}): {}", r.exceptions.len(), pairs(&r.exceptions));
        for (n, q, why) in &r.filtered {
            let _ = writeln!(text, "  filtered ({n},{q}): {why}");
        }
        let _ = writeln!(text, "  certified: {}", c.certified);
        if let Some(n) = c.column_from {
            let _ = writeln!(text, "  every n >= {n} clears for all q");
        }
        let tails: Vec<String> = c.row_tails.iter().map(|t| format!("n={}:q<{}", t.n, t.q_cut)).collect();
        if !tails.is_empty() {
            let _ = writeln!(text, "  row tails: {}", tails.join(" "));
        }
        if !c.outside_box.is_empty() {
            let _ = writeln!(text, "  outside the box: {}", pairs(&c.outside_box));
        }
        for note in &c.notes {
            let _ = writeln!(text, "  note: {note}");
        }
        reports.push(r);
    }
    let complete = reports.iter().all(|r| r.certificate.certified);
    Ok(Output::new(text, &reports, complete))
}

#[derive(Serialize)]
struct CharpolyReport {
    source: String,
    found: bool,
    attempts: Option<usize>,
    order: Option<u64>,
    count: Option<usize>,
    unit_orbits: Option<usize>,
    char_poly: Option<Vec<u32>>,
    bound: Option<ClassBound>,
}

fn charpoly_text(r: &CharpolyReport) -> String {
    let mut text = format!("source       {}\n", r.source);
    if let Some(a) = r.attempts {
        let _ = writeln!(text, "attempts     {a}");
    }
    if !r.found {
        text.push_str("no element of the target order found\n");
        return text;
    }
    if let Some(o) = r.order {
        let _ = writeln!(text, "order        {o}");
    }
    if let Some(p) = &r.char_poly {
        let _ = writeln!(text, "char poly    {p:?}");
    }
    if let Some(c) = r.count {
        let _ = writeln!(text, "count        {c}");
    }
    if let Some(u) = r.unit_orbits {
        let _ = writeln!(text, "unit orbits  {u}");
    }
    if let Some(b) = &r.bound {
        let _ = writeln!(text, "bound        {} / {} = {}", b.count, b.center_order, b.bound);
        let _ = writeln!(text, "verdict      {}", if b.f_gt_4 { "f > 4" } else { "inconclusive" });
    }
    text
}

fn positive(name: &str, v: u64) -> Result<u64, Failure> {
    if v == 0 {
        return Err(Failure::input(format!("{name} must be positive")));
    }
    Ok(v)
}

fn cmd_charpoly(cli: &Cli, mode: &CharpolyMode) -> Result<Output, Failure> {
    let bound = cli.max_order.unwrap_or(DEFAULT_ORDER_BOUND);
    let rep = match mode {
        CharpolyMode::Singer { n, q, center } => {
            let center = positive("center", *center)?;
            let g = singer_element(*n, *q)?;
            let order = element_order(&g, bound)?;
            let count = coprime_power_charpoly_count(&g, bound)?;
            CharpolyReport {
                source: format!("singer {n} {q}"),
                found: true,
                attempts: None,
                order: Some(order),
                count: Some(count),
                unit_orbits: Some(unit_orbit_count(order, *q)),
                char_poly: Some(char_poly(&g)),
                bound: Some(class_lower_bound(count as u64, center)),
            }
        }
        CharpolyMode::Search { file, target, attempts, center } => {
            let center = positive("center", *center)?;
            let gens = MatrixFile::parse(&read(file)?)?.load()?;
            eprintln!("searching {attempts} elements for order {target}");
            let out = random_element_search(&gens, *target, *attempts, cli.seed, bound)?;
            match out.found {
                Some(g) => {
                    let count = coprime_power_charpoly_count(&g, bound)?;
                    CharpolyReport {
                        source: file.display().to_string(),
                        found: true,
                        attempts: Some(out.attempts),
                        order: Some(*target),
                        count: Some(count),
                        unit_orbits: None,
                        char_poly: Some(char_poly(&g)),
                        bound: Some(class_lower_bound(count as u64, center)),
                    }
                }
                None => CharpolyReport {
                    source: file.display().to_string(),
                    found: false,
                    attempts: Some(out.attempts),
                    order: None,
                    count: None,
                    unit_orbits: None,
                    char_poly: None,
                    bound: None,
                },
            }
        }
        CharpolyMode::Bound { count, center } => CharpolyReport {
            source: "supplied count".into(),
            found: true,
            attempts: None,
            order: None,
            count: Some(positive("count", *count)? as usize),
            unit_orbits: None,
            char_poly: None,
            bound: Some(class_lower_bound(*count, positive("center", *center)?)),
        },
    };
    let complete = rep.found;
    Ok(Output::new(charpoly_text(&rep), &rep, complete))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::AnalyzePerm { input, alternating } => cmd_analyze_perm(cli, input.as_deref(), *alternating),
        Command::AnalyzeTable { table, group } => cmd_analyze_table(cli, table, group.as_deref()),
        Command::AnRank { range } => cmd_an_rank(range),
        Command::Screen { family, torus, q } => cmd_screen(cli, family, torus.as_deref(), *q),
        Command::Charpoly { mode } => cmd_charpoly(cli, mode),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.max_order == Some(0) {
        eprintln!("error: --max-order must be positive");
        return ExitCode::from(2);
    }
    let out = match run(&cli) {
        Ok(out) => out,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            return ExitCode::from(f.code);
        }
    };
    let body = match cli.format {
        Format::Text => &out.text,
        Format::Json => &out.json,
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, body) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    if out.complete {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
