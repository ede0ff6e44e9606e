//! One function per subcommand, each producing a [`Table`].

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use quadclass_core::arith::{is_prime_u64, squarefree_part_signed};
use quadclass_core::dioph::{
    classify, count_lemma23, siegel_scan, solve_bounded, FibonacciVariant, DEFAULT_Y_MAX,
};
use quadclass_core::family::{
    check_louboutin_kth_power, check_pth_power, generate_s, louboutin_field, verify_thm1, verify_thm2_pair,
    witness_order_p, PthPowerVerdict, QuadraticField, WitnessSearch,
};
use quadclass_core::qform::{class_group_structure, class_number, reduced_forms};
use quadclass_core::{DiophInstance, Discriminant, EngineBounds, Error, FamilyParams};
use quadclass_dbcheck::{CrossCheck, DbClient, DbError};
use rayon::prelude::*;

use crate::args::{parse_list, parse_range, Command, EquationArgs, FibVariant, FieldArg, GlobalOpts, GridArgs};
use crate::table::{col, Cell, Column, Kind, Status, Table};
use crate::CliError;

pub const CLASSNUM_COLUMNS: [Column; 5] = [
    col("d", Kind::Big),
    col("disc", Kind::Big),
    col("h", Kind::Int),
    col("forms", Kind::Text),
    col("skipped_reason", Kind::Text),
];

pub const CLASSGROUP_COLUMNS: [Column; 6] = [
    col("d", Kind::Big),
    col("disc", Kind::Big),
    col("h", Kind::Int),
    col("invariants", Kind::Text),
    col("generators", Kind::Text),
    col("skipped_reason", Kind::Text),
];

pub const THM1_COLUMNS: [Column; 11] = [
    col("p", Kind::Int),
    col("q", Kind::Int),
    col("r", Kind::Int),
    col("d", Kind::Big),
    col("disc", Kind::Big),
    col("h", Kind::Int),
    col("p_divides", Kind::Bool),
    col("witness", Kind::Text),
    col("skipped_reason", Kind::Text),
    col("pth_power", Kind::Text),
    col("red_flag", Kind::Text),
];

pub const PAIR_COLUMNS: [Column; 14] = [
    col("p", Kind::Int),
    col("q", Kind::Int),
    col("r", Kind::Int),
    col("m", Kind::Big),
    col("d_pair", Kind::Big),
    col("u", Kind::Big),
    col("left_d", Kind::Big),
    col("left_disc", Kind::Big),
    col("left_h", Kind::Int),
    col("right_d", Kind::Big),
    col("right_disc", Kind::Big),
    col("right_h", Kind::Int),
    col("both_divisible", Kind::Bool),
    col("skipped_reason", Kind::Text),
];

pub const LOUBOUTIN_COLUMNS: [Column; 8] = [
    col("u", Kind::Int),
    col("k", Kind::Int),
    col("d", Kind::Big),
    col("disc", Kind::Big),
    col("h", Kind::Int),
    col("k_divides", Kind::Bool),
    col("kth_power", Kind::Text),
    col("skipped_reason", Kind::Text),
];

pub const DIOPH_COLUMNS: [Column; 6] = [
    col("lambda2", Kind::Int),
    col("d1", Kind::Int),
    col("d2", Kind::Int),
    col("k", Kind::Int),
    col("x", Kind::Big),
    col("y", Kind::Int),
];

pub const LEMMA23_COLUMNS: [Column; 4] = [
    col("d", Kind::Int),
    col("q", Kind::Int),
    col("count", Kind::Int),
    col("solutions", Kind::Text),
];

pub const FAMILIES_COLUMNS: [Column; 10] = [
    col("lambda2", Kind::Int),
    col("d1", Kind::Int),
    col("d2", Kind::Int),
    col("k", Kind::Int),
    col("count", Kind::Int),
    col("sporadic", Kind::Bool),
    col("f", Kind::Text),
    col("g", Kind::Int),
    col("h", Kind::Text),
    col("explained", Kind::Bool),
];

pub const SCAN_S_COLUMNS: [Column; 9] = [
    col("p", Kind::Int),
    col("q", Kind::Int),
    col("r", Kind::Int),
    col("m", Kind::Big),
    col("d", Kind::Big),
    col("disc", Kind::Big),
    col("h", Kind::Int),
    col("in_s", Kind::Bool),
    col("skipped_reason", Kind::Text),
];

pub const SIEGEL_COLUMNS: [Column; 4] = [
    col("d0", Kind::Int),
    col("p", Kind::Int),
    col("x", Kind::Int),
    col("y", Kind::Big),
];

pub const CROSSCHECK_COLUMNS: [Column; 5] = [
    col("disc", Kind::Big),
    col("local_h", Kind::Int),
    col("remote_h", Kind::Int),
    col("verdict", Kind::Text),
    col("reason", Kind::Text),
];

pub struct Context {
    pub bounds: EngineBounds,
    pub y_max: u32,
    pub offline: bool,
    pub quiet: bool,
    pool: rayon::ThreadPool,
}

impl Context {
    pub fn new(opts: &GlobalOpts) -> Result<Self, CliError> {
        let mut bounds = EngineBounds::default();
        if let Some(b) = opts.enum_bound {
            bounds.enum_bound = b;
        }
        if let Some(b) = opts.struct_bound {
            bounds.struct_bound = b;
        }
        if let Some(e) = opts.effort {
            bounds.budget.rho_iterations = e;
        }
        let workers = opts
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Self {
            bounds,
            y_max: opts.ymax.unwrap_or(DEFAULT_Y_MAX),
            offline: opts.offline,
            quiet: opts.quiet,
            pool,
        })
    }

    /// Maps `f` over `items` on the worker pool; output keeps input order.
    fn par_map<T: Sync, R: Send>(&self, label: &str, items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
        let done = AtomicUsize::new(0);
        let total = items.len();
        let step = (total / 20).max(1);
        self.pool.install(|| {
            items
                .par_iter()
                .map(|item| {
                    let out = f(item);
                    let n = done.fetch_add(1, Ordering::Relaxed) + 1;
                    if !self.quiet && (n.is_multiple_of(step) || n == total) {
                        eprintln!("[{label}] {n}/{total}");
                    }
                    out
                })
                .collect()
        })
    }
}

pub fn run_command(command: &Command, ctx: &Context) -> Result<Table, CliError> {
    match command {
        Command::Classnum { field, forms } => classnum(field, *forms, ctx),
        Command::Classgroup { field } => classgroup(field, ctx),
        Command::VerifyThm1 { grid } => verify_thm1_grid(grid, ctx),
        Command::VerifyPairs { grid } => verify_pairs_grid(grid, ctx),
        Command::Louboutin { u, k } => louboutin(u, k, ctx),
        Command::Dioph { eq, fib_variant } => dioph(eq, *fib_variant, ctx),
        Command::Lemma23 { d, q } => lemma23(d, q, ctx),
        Command::Families { eq, fib_variant } => families(eq, *fib_variant, ctx),
        Command::ScanS { p, q_max, r_max } => scan_s(*p, *q_max, *r_max, ctx),
        Command::Siegel { d0, p, x_max } => siegel(*d0, *p, *x_max),
        Command::Crosscheck { field, disc } => crosscheck(field, disc, ctx),
    }
}

fn field_discriminant_of(arg: &FieldArg, ctx: &Context) -> Result<(Option<i128>, Discriminant), CliError> {
    match (arg.field, arg.disc) {
        (Some(d), _) => {
            let big = BigInt::from(d);
            let (core, s) = squarefree_part_signed(&big, &ctx.bounds.budget)?;
            if d >= 0 || s != 1u32.into() || core != big {
                return Err(CliError::Usage(format!("-d expects a negative squarefree integer, got {d}")));
            }
            Ok((Some(d), Discriminant::of_field(&big)?))
        }
        (None, Some(disc)) => Ok((None, Discriminant::new(disc)?)),
        (None, None) => Err(CliError::Usage("one of -d or -D is required".into())),
    }
}

fn skip_status<T>(r: &Result<T, Error>) -> Status {
    if r.is_ok() {
        Status::Ok
    } else {
        Status::Skipped
    }
}

fn classnum(arg: &FieldArg, forms: bool, ctx: &Context) -> Result<Table, CliError> {
    let (d, disc) = field_discriminant_of(arg, ctx)?;
    let mut table = Table::new(&CLASSNUM_COLUMNS);
    let result = if forms {
        reduced_forms(&disc, &ctx.bounds).map(|f| (f.len() as u64, Some(f)))
    } else {
        ctx.pool.install(|| class_number(&disc, &ctx.bounds)).map(|h| (h, None))
    };
    let status = skip_status(&result);
    let (h, listing, reason) = match result {
        Ok((h, f)) => (Some(h), f.map(|f| join(f.iter().map(ToString::to_string))), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    table.push(
        vec![
            Cell::opt(d, Cell::big),
            Cell::big(disc),
            Cell::opt(h, Cell::int),
            Cell::opt(listing, Cell::Text),
            Cell::opt(reason, Cell::Text),
        ],
        status,
    );
    Ok(table)
}

fn classgroup(arg: &FieldArg, ctx: &Context) -> Result<Table, CliError> {
    let (d, disc) = field_discriminant_of(arg, ctx)?;
    let mut table = Table::new(&CLASSGROUP_COLUMNS);
    let result = ctx.pool.install(|| class_group_structure(&disc, &ctx.bounds));
    let status = skip_status(&result);
    let row = match result {
        Ok(g) => vec![
            Cell::opt(d, Cell::big),
            Cell::big(disc),
            Cell::int(g.class_number),
            Cell::text(format!("{:?}", g.elementary_divisors)),
            Cell::text(join(g.generators.iter().map(ToString::to_string))),
            Cell::Null,
        ],
        Err(e) => vec![
            Cell::opt(d, Cell::big),
            Cell::big(disc),
            Cell::Null,
            Cell::Null,
            Cell::Null,
            Cell::text(e.to_string()),
        ],
    };
    table.push(row, status);
    Ok(table)
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join("; ")
}

fn grid(args: &GridArgs) -> Result<Vec<FamilyParams>, CliError> {
    let ps = parse_list(&args.p, true).map_err(CliError::Usage)?;
    let qs = parse_list(&args.q, true).map_err(CliError::Usage)?;
    let mut out = Vec::new();
    for &p in &ps {
        let p = u32::try_from(p).map_err(|_| CliError::Usage(format!("p = {p} too large")))?;
        for &q in &qs {
            for r in 1..=args.r_max {
                out.push(FamilyParams::new(p, q, r)?);
            }
        }
    }
    Ok(out)
}

fn pth_power_text(v: &PthPowerVerdict) -> String {
    match v {
        PthPowerVerdict::NotPthPower => "not-pth-power".into(),
        PthPowerVerdict::IsPthPower { beta, sign } => {
            format!("pth-power: {}({} + {}*sqrt(d))/2", if *sign < 0 { "-" } else { "" }, beta.x, beta.y)
        }
        PthPowerVerdict::Skipped(why) => format!("skipped: {why}"),
    }
}

fn field_cells(f: &QuadraticField) -> [Cell; 3] {
    [
        Cell::opt(f.d.as_ref(), Cell::big),
        Cell::opt(f.discriminant.as_ref(), Cell::big),
        Cell::opt(f.class_number, Cell::int),
    ]
}

fn thm1_row(params: &FamilyParams, ctx: &Context) -> (Vec<Cell>, Status) {
    let head = [
        Cell::int(params.p()),
        Cell::int(params.q()),
        Cell::int(params.r()),
    ];
    let rec = match verify_thm1(params, &ctx.bounds) {
        Ok(rec) => rec,
        Err(e) => {
            let flagged = matches!(e, Error::InvariantViolated(_));
            let mut row = head.to_vec();
            row.extend([Cell::Null, Cell::Null, Cell::Null, Cell::Null, Cell::Null]);
            if flagged {
                row.extend([Cell::Null, Cell::Null, Cell::text(e.to_string())]);
                return (row, Status::RedFlag);
            }
            row.extend([Cell::text(e.to_string()), Cell::Null, Cell::Null]);
            return (row, Status::Skipped);
        }
    };
    let mut flags = Vec::new();
    let mut notes = rec.field.skipped_reason.clone().into_iter().collect::<Vec<_>>();
    if rec.p_divides() == Some(false) {
        flags.push(format!("p = {} does not divide h", params.p()));
    }
    let witness = match rec.field.class_number {
        Some(h) if h <= ctx.bounds.struct_bound => match witness_order_p(params, &ctx.bounds) {
            Ok(WitnessSearch::Found(f)) => Some(f.to_string()),
            Ok(WitnessSearch::NotFound { candidates }) => {
                flags.push(format!(
                    "no form of norm 2m and order p among [{}]",
                    join(candidates.iter().map(ToString::to_string))
                ));
                None
            }
            Err(e) => {
                notes.push(format!("witness: {e}"));
                None
            }
        },
        _ => None,
    };
    let pth = check_pth_power(params, &ctx.bounds.budget);
    if matches!(pth, PthPowerVerdict::IsPthPower { .. }) {
        flags.push("target element is a pth power".into());
    }
    let status = if !flags.is_empty() {
        Status::RedFlag
    } else if rec.field.class_number.is_none() {
        Status::Skipped
    } else {
        Status::Ok
    };
    let mut row = head.to_vec();
    row.extend(field_cells(&rec.field));
    row.extend([
        Cell::opt(rec.p_divides(), Cell::Bool),
        Cell::opt(witness, Cell::Text),
        Cell::opt((!notes.is_empty()).then(|| notes.join("; ")), Cell::Text),
        Cell::text(pth_power_text(&pth)),
        Cell::opt((!flags.is_empty()).then(|| flags.join("; ")), Cell::Text),
    ]);
    (row, status)
}

fn verify_thm1_grid(args: &GridArgs, ctx: &Context) -> Result<Table, CliError> {
    let grid = grid(args)?;
    let mut table = Table::new(&THM1_COLUMNS);
    for (row, status) in ctx.par_map("verify-thm1", &grid, |params| thm1_row(params, ctx)) {
        table.push(row, status);
    }
    Ok(table)
}

fn verify_pairs_grid(args: &GridArgs, ctx: &Context) -> Result<Table, CliError> {
    let grid = grid(args)?;
    let rows = ctx.par_map("verify-pairs", &grid, |params| {
        let head = vec![
            Cell::int(params.p()),
            Cell::int(params.q()),
            Cell::int(params.r()),
            Cell::big(params.m()),
        ];
        match verify_thm2_pair(params, &ctx.bounds) {
            Ok(rec) => {
                let mut row = head;
                row.extend([Cell::big(&rec.d_pair), Cell::big(&rec.u)]);
                row.extend(field_cells(&rec.left));
                row.extend(field_cells(&rec.right));
                let reasons: Vec<String> = [("left", &rec.left.skipped_reason), ("right", &rec.right.skipped_reason)]
                    .into_iter()
                    .filter_map(|(side, r)| r.as_ref().map(|r| format!("{side}: {r}")))
                    .collect();
                row.push(Cell::opt(rec.both_divisible, Cell::Bool));
                row.push(Cell::opt((!reasons.is_empty()).then(|| reasons.join("; ")), Cell::Text));
                let status = match rec.both_divisible {
                    Some(true) => Status::Ok,
                    Some(false) => Status::RedFlag,
                    None if rec.left.divisible == Some(false) || rec.right.divisible == Some(false) => Status::RedFlag,
                    None => Status::Skipped,
                };
                (row, status)
            }
            Err(e) => {
                let status = if matches!(e, Error::InvariantViolated(_)) {
                    Status::RedFlag
                } else {
                    Status::Skipped
                };
                let mut row = head;
                row.extend(std::iter::repeat_n(Cell::Null, 9));
                row.push(Cell::text(e.to_string()));
                (row, status)
            }
        }
    });
    let mut table = Table::new(&PAIR_COLUMNS);
    for (row, status) in rows {
        table.push(row, status);
    }
    Ok(table)
}

fn louboutin(u: &str, k: &str, ctx: &Context) -> Result<Table, CliError> {
    let us = parse_list(u, false).map_err(CliError::Usage)?;
    let ks = parse_list(k, false).map_err(CliError::Usage)?;
    let mut items = Vec::new();
    for &u in &us {
        for &k in &ks {
            let k = u32::try_from(k).map_err(|_| CliError::Usage(format!("k = {k} too large")))?;
            items.push((u, k));
        }
    }
    let rows = ctx.par_map("louboutin", &items, |&(u, k)| {
        let head = vec![Cell::int(u), Cell::int(k)];
        match louboutin_field(u, k, &ctx.bounds) {
            Ok(rec) => {
                let kth = check_louboutin_kth_power(u, k, &ctx.bounds.budget);
                let mut row = head;
                row.extend(field_cells(&rec.field));
                row.extend([
                    Cell::opt(rec.field.divisible, Cell::Bool),
                    Cell::text(pth_power_text(&kth)),
                    Cell::opt(rec.field.skipped_reason.clone(), Cell::Text),
                ]);
                let status = match rec.field.divisible {
                    Some(true) => Status::Ok,
                    Some(false) => Status::RedFlag,
                    None => Status::Skipped,
                };
                Ok((row, status))
            }
            Err(Error::InvalidInput(msg)) => Err(CliError::Usage(msg)),
            Err(e) => {
                let mut row = head;
                row.extend([Cell::Null, Cell::Null, Cell::Null, Cell::Null, Cell::Null, Cell::text(e.to_string())]);
                Ok((row, Status::Skipped))
            }
        }
    });
    let mut table = Table::new(&LOUBOUTIN_COLUMNS);
    for r in rows {
        let (row, status) = r?;
        table.push(row, status);
    }
    Ok(table)
}

fn variant(v: FibVariant) -> FibonacciVariant {
    match v {
        FibVariant::Set => FibonacciVariant::SetDefinition,
        FibVariant::Lemma => FibonacciVariant::LemmaProof,
    }
}

/// Whether the at-most-one classification is claimed for this instance.
fn classification_applies(inst: &DiophInstance) -> bool {
    let k = inst.k();
    matches!(inst.lambda_sq(), 2 | 4)
        && is_prime_u64(k)
        && (inst.d1() as u128 * inst.d2() as u128).gcd(&(k as u128)) == 1
        && (k != 2 || inst.lambda_sq() == 4)
}

fn dioph(eq: &EquationArgs, fib: FibVariant, ctx: &Context) -> Result<Table, CliError> {
    let inst = DiophInstance::new(eq.lambda2, eq.d1, eq.d2, eq.k)?;
    let sols = solve_bounded(&inst, ctx.y_max);
    let explained = sols.count() < 2 || classify(&inst, variant(fib))?.any();
    let status = if !explained && classification_applies(&inst) {
        Status::RedFlag
    } else {
        Status::Ok
    };
    let mut table = Table::new(&DIOPH_COLUMNS);
    for (x, y) in &sols.solutions {
        table.push(
            vec![
                Cell::int(eq.lambda2),
                Cell::int(eq.d1),
                Cell::int(eq.d2),
                Cell::int(eq.k),
                Cell::big(x),
                Cell::int(*y),
            ],
            status,
        );
    }
    Ok(table)
}

fn families(eq: &EquationArgs, fib: FibVariant, ctx: &Context) -> Result<Table, CliError> {
    let inst = DiophInstance::new(eq.lambda2, eq.d1, eq.d2, eq.k)?;
    let count = solve_bounded(&inst, ctx.y_max).count();
    let m = classify(&inst, variant(fib))?;
    let status = if count >= 2 && !m.any() && classification_applies(&inst) {
        Status::RedFlag
    } else {
        Status::Ok
    };
    let mut table = Table::new(&FAMILIES_COLUMNS);
    table.push(
        vec![
            Cell::int(eq.lambda2),
            Cell::int(eq.d1),
            Cell::int(eq.d2),
            Cell::int(eq.k),
            Cell::int(count as u64),
            Cell::Bool(m.sporadic),
            Cell::opt(m.f, |(j, e)| Cell::text(format!("j={j},e={e}"))),
            Cell::opt(m.g, Cell::int),
            Cell::opt(m.h, |(r, s)| Cell::text(format!("r={r},s={s}"))),
            Cell::Bool(m.any()),
        ],
        status,
    );
    Ok(table)
}

fn lemma23(d: &str, q: &str, ctx: &Context) -> Result<Table, CliError> {
    let (lo, hi) = parse_range(d).map_err(CliError::Usage)?;
    if lo <= 3 {
        return Err(CliError::Usage(format!("D must exceed 3, range starts at {lo}")));
    }
    let qs = parse_list(q, true).map_err(CliError::Usage)?;
    if let Some(bad) = qs.iter().find(|&&q| q < 3) {
        return Err(CliError::Usage(format!("q = {bad} is not an odd prime")));
    }
    let ds: Vec<u64> = (lo..=hi).collect();
    let per_d = ctx.par_map("lemma23", &ds, |&d| {
        qs.iter()
            .map(|&q| count_lemma23(d, q, ctx.y_max).map(|s| (d, q, s)))
            .collect::<Result<Vec<_>, _>>()
    });
    let mut table = Table::new(&LEMMA23_COLUMNS);
    for batch in per_d {
        for (d, q, sols) in batch? {
            if sols.count() == 0 {
                continue;
            }
            let text = join(sols.solutions.iter().map(|(x, y)| format!("({x},{y})")));
            let status = if sols.count() >= 2 { Status::RedFlag } else { Status::Ok };
            table.push(vec![Cell::int(d), Cell::int(q), Cell::int(sols.count() as u64), Cell::text(text)], status);
        }
    }
    Ok(table)
}

fn scan_s(p: u32, q_max: u64, r_max: u32, ctx: &Context) -> Result<Table, CliError> {
    let scan = ctx.pool.install(|| generate_s(p, q_max, r_max, &ctx.bounds))?;
    let mut rows: Vec<(FamilyParams, Vec<Cell>, Status)> = Vec::new();
    for (rec, admitted) in scan
        .admitted
        .iter()
        .map(|r| (r, true))
        .chain(scan.rejected.iter().map(|r| (r, false)))
    {
        let mut row = vec![
            Cell::int(rec.params.p()),
            Cell::int(rec.params.q()),
            Cell::int(rec.params.r()),
            Cell::big(rec.params.m()),
        ];
        row.extend(field_cells(&rec.field));
        row.extend([Cell::Bool(admitted), Cell::Null]);
        rows.push((rec.params.clone(), row, if admitted { Status::Ok } else { Status::RedFlag }));
    }
    for (params, why) in &scan.skipped {
        let row = vec![
            Cell::int(params.p()),
            Cell::int(params.q()),
            Cell::int(params.r()),
            Cell::big(params.m()),
            Cell::Null,
            Cell::Null,
            Cell::Null,
            Cell::Null,
            Cell::text(why.clone()),
        ];
        rows.push((params.clone(), row, Status::Skipped));
    }
    rows.sort_by_key(|(params, _, _)| (params.q(), params.r()));
    let mut table = Table::new(&SCAN_S_COLUMNS);
    for (_, row, status) in rows {
        table.push(row, status);
    }
    Ok(table)
}

fn siegel(d0: i64, p: u32, x_max: u64) -> Result<Table, CliError> {
    let mut table = Table::new(&SIEGEL_COLUMNS);
    for (x, y) in siegel_scan(d0, p, x_max)? {
        table.push(vec![Cell::int(d0), Cell::int(p), Cell::int(x), Cell::big(y)], Status::Ok);
    }
    Ok(table)
}

fn crosscheck(fields: &[i128], discs: &[i128], ctx: &Context) -> Result<Table, CliError> {
    let mut targets = Vec::new();
    for &d in fields {
        let arg = FieldArg { field: Some(d), disc: None };
        targets.push(field_discriminant_of(&arg, ctx)?.1);
    }
    for &d in discs {
        targets.push(Discriminant::new(d)?);
    }
    if targets.is_empty() {
        return Err(CliError::Usage("crosscheck needs at least one -d or -D".into()));
    }
    let client = DbClient::from_env(ctx.offline)?;
    let mut table = Table::new(&CROSSCHECK_COLUMNS);
    for disc in targets {
        let local = ctx.pool.install(|| class_number(&disc, &ctx.bounds));
        let outcome = match local {
            Ok(h) => client.crosscheck_with(&disc, h).map(|c| (h, c)),
            Err(e) => Err(DbError::Core(e)),
        };
        let (row, status) = match outcome {
            Ok((h, CrossCheck::Agree(_))) => (
                [Cell::int(h), Cell::int(h), Cell::text("agree"), Cell::Null],
                Status::Ok,
            ),
            Ok((h, CrossCheck::Disagree { remote, .. })) => (
                [Cell::int(h), Cell::int(remote), Cell::text("disagree"), Cell::Null],
                Status::RedFlag,
            ),
            Ok((h, CrossCheck::NotAvailable(why))) => (
                [Cell::int(h), Cell::Null, Cell::text("not-available"), Cell::text(why)],
                Status::Skipped,
            ),
            Err(e @ DbError::NotFundamental(_)) => return Err(e.into()),
            Err(e) => (
                [Cell::Null, Cell::Null, Cell::text("not-available"), Cell::text(e.to_string())],
                Status::Skipped,
            ),
        };
        let mut full = vec![Cell::big(disc)];
        full.extend(row);
        table.push(full, status);
    }
    Ok(table)
}
