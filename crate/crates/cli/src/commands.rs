use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde_json::{json, Value};
use shuffles_core::action::{orbit_is_product_of_chains, LocalAction};
use shuffles_core::arith::{render_q, Q};
use shuffles_core::labeling::{ChainSet, CoverKind, ShuffleLabeler};
use shuffles_core::poset::RankSet;
use shuffles_core::series::{
    classify_elements, convolve_closed_form, convolve_direct, count_by_type, zeta_polynomial_gf,
    zeta_values, BivariateSeries, MultiplicativeFunction,
};
use shuffles_core::symfunc::{flag_qsym, render_expansion, Basis, Partition};
use shuffles_core::verify;
use shuffles_core::{Error, Letter, ShufflePoset, ShuffleWord};

use crate::{Command, Format, Sizes};

pub const DEFAULT_MAX_RANK: usize = 8;
const MAX_RANK_VAR: &str = "SHUFFLES_MAX_RANK";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    TooLarge(String),
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::TooLarge(_) => 3,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::TooLarge(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge { .. } => CliError::TooLarge(e.to_string()),
            Error::Parse(_) | Error::BadLetter(_) | Error::InvalidWord(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

pub struct Output {
    pub text: String,
    /// Exit nonzero after printing.
    pub failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failed: false }
    }
}

type CmdResult = Result<Output, CliError>;

pub fn run(cmd: &Command, format: Format) -> CmdResult {
    if format == Format::Dot && !matches!(cmd, Command::Build(_)) {
        return Err(CliError::Usage("DOT output is only available for `build`".into()));
    }
    match cmd {
        Command::Build(s) => build(poset(*s)?, format),
        Command::Flag(s) => flag(poset(*s)?, format),
        Command::Chains { sizes, limit } => chains(poset(*sizes)?, *limit, format),
        Command::Orbits(s) => orbits(poset(*s)?, format),
        Command::Mobius(s) => mobius(poset(*s)?, format),
        Command::Zeta { sizes, k } => zeta(*sizes, *k, format),
        Command::Types(s) => types(*s, format),
        Command::Convolve { f, g, trunc, check } => convolve(f, g, trunc, *check, format),
        Command::Verify { criteria } => run_verify(criteria, format),
    }
}

fn max_rank() -> Result<usize, CliError> {
    match std::env::var(MAX_RANK_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_RANK_VAR}={v} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_MAX_RANK),
    }
}

fn guard(s: Sizes) -> Result<(), CliError> {
    let cap = max_rank()?;
    let rank = s.lower as usize + s.upper as usize;
    if rank > cap {
        return Err(CliError::TooLarge(format!(
            "W({},{}) has rank {rank}, above the cap {cap} (set {MAX_RANK_VAR} to raise it)",
            s.lower, s.upper
        )));
    }
    if s.upper >= 64 {
        return Err(CliError::TooLarge("the upper alphabet is limited to 63 letters".into()));
    }
    Ok(())
}

fn poset(s: Sizes) -> Result<ShufflePoset, CliError> {
    guard(s)?;
    Ok(ShufflePoset::with_sizes(s.lower, s.upper))
}

fn title(p: &ShufflePoset) -> String {
    let ctx = p.context();
    format!("W({},{})", ctx.lower, ctx.upper)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn tokens(w: &ShuffleWord) -> Value {
    json!(w.tokens())
}

fn build(p: ShufflePoset, format: Format) -> CmdResult {
    let poset = p.poset();
    let text = match format {
        Format::Dot => poset.dot(&title(&p)),
        Format::Json => {
            let elements: Vec<Value> = (0..poset.len())
                .map(|id| json!({ "id": id, "rank": poset.rank(id), "word": tokens(poset.element(id)) }))
                .collect();
            let covers: Vec<Value> = (0..poset.len())
                .flat_map(|u| poset.upper_covers(u).iter().map(move |&v| json!([u, v])))
                .collect();
            let ctx = p.context();
            pretty(&json!({
                "lower": ctx.lower,
                "upper": ctx.upper,
                "rank": poset.height(),
                "elements": elements,
                "covers": covers,
            }))
        }
        Format::Text => {
            let mut out = format!("{}: rank {}, {} elements\n", title(&p), poset.height(), poset.len());
            for r in 0..=poset.height() {
                let words: Vec<String> = poset.layer(r).iter().map(|&e| poset.element(e).to_string()).collect();
                let _ = writeln!(out, "rank {r} ({}): {}", words.len(), words.join(" | "));
            }
            out
        }
    };
    Ok(Output::ok(text))
}

fn partition_terms(coeffs: &BTreeMap<Partition, Q>) -> Value {
    // largest partitions first, matching the usual dominance-style listing
    Value::Array(
        coeffs
            .iter()
            .rev()
            .map(|(l, c)| json!({ "partition": l.parts(), "coeff": render_q(c) }))
            .collect(),
    )
}

fn flag(p: ShufflePoset, format: Format) -> CmdResult {
    let poset = p.poset();
    let n = poset.height();
    let fv = poset.flag_vectors();
    let f = flag_qsym(poset);
    let m = f.is_symmetric().map_err(|e| CliError::Failed(format!("flag function is not symmetric: {e:?}")))?;
    let e = f.expand(Basis::Elementary).unwrap_or_default();
    let text = match format {
        Format::Json => {
            let sets: Vec<Value> = RankSet::all(n)
                .map(|s| json!({ "set": s.ranks(), "alpha": fv.alpha(s) as u64, "beta": fv.beta(s) as i64 }))
                .collect();
            pretty(&json!({
                "rank": n,
                "rank_sets": sets,
                "monomial": partition_terms(&m),
                "elementary": partition_terms(&e),
            }))
        }
        _ => {
            let mut out = format!("{}: flag vectors by rank set\n", title(&p));
            let rows: Vec<(String, String, String)> = RankSet::all(n)
                .map(|s| (s.to_string(), fv.alpha(s).to_string(), fv.beta(s).to_string()))
                .collect();
            let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(1).max(3);
            let _ = writeln!(out, "{:<w$}  {:>8}  {:>8}", "S", "alpha", "beta");
            for (s, a, b) in rows {
                let _ = writeln!(out, "{s:<w$}  {a:>8}  {b:>8}");
            }
            let _ = writeln!(out, "F = {}", render_expansion(Basis::Monomial, &m));
            let _ = writeln!(out, "  = {}", render_expansion(Basis::Elementary, &e));
            out
        }
    };
    Ok(Output::ok(text))
}

fn kind_tag(k: CoverKind) -> &'static str {
    match k {
        CoverKind::X => "x",
        CoverKind::XA => "xa",
        CoverKind::A => "a",
    }
}

fn chains(p: ShufflePoset, limit: Option<usize>, format: Format) -> CmdResult {
    let lab = ShuffleLabeler::new(&p);
    let set = ChainSet::enumerate(p.poset(), &lab);
    let ctx = p.context();
    let shown = limit.unwrap_or(set.len()).min(set.len());
    let mut rows = Vec::with_capacity(shown);
    for c in 0..shown {
        let words = p.words(&set.chain(c).0);
        let seq = shuffles_core::labeling::label_words(ctx, &words)?;
        rows.push((words, seq));
    }
    let text = match format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .enumerate()
                .map(|(id, (words, seq))| {
                    json!({
                        "id": id,
                        "words": words.iter().map(tokens).collect::<Vec<_>>(),
                        "labels": seq.labels.iter().map(Letter::to_string).collect::<Vec<_>>(),
                        "kinds": seq.kinds.iter().map(|&k| kind_tag(k)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(&json!({ "total": set.len(), "chains": items }))
        }
        _ => {
            let mut out = format!("{}: {} maximal chains\n", title(&p), set.len());
            for (id, (words, seq)) in rows.iter().enumerate() {
                let path: Vec<String> = words.iter().map(ToString::to_string).collect();
                let labels: Vec<String> = seq.labels.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "{id:>6}  [{}]  {}", labels.join(" "), path.join(" < "));
            }
            if shown < set.len() {
                let _ = writeln!(out, "... {} more", set.len() - shown);
            }
            out
        }
    };
    Ok(Output::ok(text))
}

fn shape_name(nu: &Partition) -> String {
    if nu.is_empty() {
        return "C1".into();
    }
    nu.parts().iter().map(|p| format!("C{}", p + 1)).collect::<Vec<_>>().join(" x ")
}

fn orbits(p: ShufflePoset, format: Format) -> CmdResult {
    let action = LocalAction::from_poset(p.poset(), &ShuffleLabeler::new(&p))?;
    action.verify_coxeter().map_err(|c| CliError::Failed(c.to_string()))?;
    let orbits = action.orbits();
    let mut report = Vec::with_capacity(orbits.len());
    for o in &orbits {
        let is_product = orbit_is_product_of_chains(&action, o)?;
        if !is_product {
            return Err(CliError::Failed(format!("orbit of chain {} is not a product of chains", o.chains[0])));
        }
        report.push((o, is_product));
    }
    let text = match format {
        Format::Json => {
            let items: Vec<Value> = report
                .iter()
                .map(|(o, is_product)| {
                    let rep = p.words(&action.chains().chain(o.chains[0] as usize).0);
                    json!({
                        "size": o.chains.len(),
                        "type": o.kind.parts(),
                        "multiset": o.multiset.iter().map(|(l, k)| json!({ "letter": l.to_string(), "count": k })).collect::<Vec<_>>(),
                        "shape": shape_name(&o.kind),
                        "product_of_chains": is_product,
                        "representative": rep.iter().map(tokens).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(&json!({ "chains": action.len(), "orbits": items }))
        }
        _ => {
            let mut out = format!("{}: {} maximal chains in {} orbits\n", title(&p), action.len(), orbits.len());
            for (o, _) in &report {
                let ms: Vec<String> = o
                    .multiset
                    .iter()
                    .map(|(l, k)| if *k == 1 { l.to_string() } else { format!("{l}^{k}") })
                    .collect();
                let _ = writeln!(
                    out,
                    "{:>8}  type {:<12} {{{}}}  {}",
                    o.chains.len(),
                    o.kind.to_string(),
                    ms.join(","),
                    shape_name(&o.kind)
                );
            }
            out
        }
    };
    Ok(Output::ok(text))
}

fn mobius(p: ShufflePoset, format: Format) -> CmdResult {
    let poset = p.poset();
    let mu = poset.mobius(poset.bottom(), poset.top())?;
    let text = match format {
        Format::Json => pretty(&json!({ "mobius": mu })),
        _ => format!("{mu}\n"),
    };
    Ok(Output::ok(text))
}

fn zeta(s: Sizes, k: i64, format: Format) -> CmdResult {
    guard(s)?;
    let value = zeta_values(s.lower, s.upper, k);
    let series = zeta_polynomial_gf(k, (s.lower as usize, s.upper as usize));
    let from_series = series.coeff(s.lower as usize, s.upper as usize).clone();
    if value != from_series {
        return Err(CliError::Failed(format!(
            "poset gives {} but the generating function gives {}",
            render_q(&value),
            render_q(&from_series)
        )));
    }
    let text = match format {
        Format::Json => pretty(&json!({ "k": k, "value": render_q(&value) })),
        _ => format!("{}\n", render_q(&value)),
    };
    Ok(Output::ok(text))
}

fn types(s: Sizes, format: Format) -> CmdResult {
    guard(s)?;
    let census = classify_elements(s.lower, s.upper)?;
    let mut rows = Vec::with_capacity(census.len());
    for (t, count) in &census {
        rows.push((t, *count, count_by_type(t)?));
    }
    let mismatch = rows.iter().any(|(_, c, f)| c != f);
    let text = match format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(t, c, f)| json!({ "type": t, "count": *c as u64, "formula": *f as u64 }))
                .collect();
            pretty(&json!({ "lower": s.lower, "upper": s.upper, "types": items }))
        }
        _ => {
            let fmt_map = |m: &BTreeMap<(usize, usize), usize>| {
                m.iter().map(|((i, j), k)| format!("W{i}{j}^{k}")).collect::<Vec<_>>().join(" ")
            };
            let mut out = format!("W({},{}): {} types\n", s.lower, s.upper, rows.len());
            let _ = writeln!(out, "{:>6} {:>7}  below | above", "count", "formula");
            for (t, c, f) in &rows {
                let _ = writeln!(out, "{c:>6} {f:>7}  {} | {}", fmt_map(&t.lower), fmt_map(&t.upper));
            }
            out
        }
    };
    Ok(Output { text, failed: mismatch })
}

fn parse_trunc(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("truncation `{s}` should look like 8,8"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn function(name: &str, trunc: (usize, usize)) -> Result<MultiplicativeFunction, CliError> {
    match name {
        "zeta" => Ok(MultiplicativeFunction::zeta(trunc)),
        "mu" => Ok(MultiplicativeFunction::mu(trunc)),
        "delta" => Ok(MultiplicativeFunction::delta(trunc)),
        _ => {
            if let Some(seed) = name.strip_prefix("random:") {
                let seed = seed.parse().map_err(|_| CliError::Usage(format!("bad seed in `{name}`")))?;
                return Ok(MultiplicativeFunction::random(trunc, seed));
            }
            let text = std::fs::read_to_string(name).map_err(|e| CliError::Usage(format!("{name}: {e}")))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{name}: {e}")))?;
            Ok(MultiplicativeFunction::from_json(&v)?)
        }
    }
}

fn convolve(f: &str, g: &str, trunc: &str, check: Option<u16>, format: Format) -> CmdResult {
    let trunc = parse_trunc(trunc)?;
    let (f, g) = (function(f, trunc)?, function(g, trunc)?);
    let product = convolve_closed_form(f.series(), g.series())?;
    let mut failed = false;
    let mut notes = String::new();
    if let Some(limit) = check {
        let (tx, ty) = product.truncation();
        for i in 0..=tx.min(limit as usize) {
            for j in 0..=ty.min(limit as usize - i) {
                guard(Sizes { lower: i as u16, upper: j as u16 })?;
                let direct = convolve_direct(&f, &g, i as u16, j as u16)?;
                if &direct != product.coeff(i, j) {
                    failed = true;
                    let _ = writeln!(
                        notes,
                        "mismatch at ({i},{j}): closed form {} vs direct {}",
                        render_q(product.coeff(i, j)),
                        render_q(&direct)
                    );
                }
            }
        }
        if !failed {
            let _ = writeln!(notes, "closed form agrees with the direct sum for i + j <= {limit}");
        }
    }
    let table = MultiplicativeFunction::new(product.clone())?;
    let text = match format {
        Format::Json => pretty(&table.to_json()),
        _ => format!("{}{}", grid(&product), notes),
    };
    Ok(Output { text, failed })
}

fn grid(s: &BivariateSeries) -> String {
    format!("rows: powers of x, columns: powers of y\n{s}")
}

fn run_verify(criteria: &[u8], format: Format) -> CmdResult {
    let numbers: Vec<u8> = if criteria.is_empty() {
        verify::CRITERIA.iter().map(|&(n, _)| n).collect()
    } else {
        criteria.to_vec()
    };
    let mut outcomes = Vec::with_capacity(numbers.len());
    for n in numbers {
        outcomes.push(verify::run(n).ok_or_else(|| CliError::Usage(format!("no criterion {n}")))?);
    }
    let failed = outcomes.iter().any(|o| !o.passed);
    let text = match format {
        Format::Json => pretty(&json!({ "passed": !failed, "criteria": outcomes })),
        _ => outcomes.iter().map(|o| format!("{o}\n")).collect(),
    };
    Ok(Output { text, failed })
}
