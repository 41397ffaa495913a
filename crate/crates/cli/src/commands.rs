use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use bnsi_core::bounds::{
    bounds_report, partition_optimizer, simple_scheme, upper_bound_disjoint, upper_bound_mds, upper_bound_mds_disjoint,
    Block, Construction,
};
use bnsi_core::decoder::build_decoder;
use bnsi_core::index_coding::reduce_to_ic;
use bnsi_core::oracle::{optimal_codelength_exhaustive, optimal_codelength_subspace};
use bnsi_core::sim::simulate;
use bnsi_core::structure::{b_max, disjoint_phi_collection, phi_emptiness};
use bnsi_core::validity::{is_valid_by_enumeration, is_valid_by_rank, Verdict};
use bnsi_core::{Elem, IndexSet, Matrix};

use crate::input::{self, UsageError};
use crate::{Command, Scheme, SolveMethod, ValidateMethod};

/// What a command prints in each format, and its exit status.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }
}

pub fn run(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Validate { problem, matrix, method } => validate(&problem, &matrix, method),
        Command::Solve { problem, method, n_max, out } => solve(&problem, method, n_max, out.as_deref()),
        Command::Bounds { problem, oracle } => bounds(&problem, oracle),
        Command::Construct { problem, scheme, out } => construct(&problem, scheme, out.as_deref()),
        Command::Analyze { problem } => analyze(&problem),
        Command::Decode { problem, matrix, user, codeword, sideinfo, show_table } => {
            decode(&problem, &matrix, user, &codeword, &sideinfo, show_table)
        }
        Command::Reduce { problem, out } => reduce(&problem, out.as_deref()),
        Command::Simulate { problem, matrix, trials, seed, fault_injection } => {
            sim(&problem, &matrix, trials, seed, fault_injection)
        }
    }
}

fn vec_text(v: &[Elem]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", items.join(","))
}

fn sets_text(sets: &[IndexSet]) -> String {
    let items: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    std::fs::write(path, m.to_text()).with_context(|| format!("writing {}", path.display()))
}

fn validate(problem: &str, matrix: &str, method: ValidateMethod) -> Result<Report> {
    let p = input::problem(problem)?;
    let l = input::matrix(matrix, &p)?;
    let by_enum = match method {
        ValidateMethod::Enum | ValidateMethod::Both => Some(is_valid_by_enumeration(&p, &l)?),
        ValidateMethod::Rank => None,
    };
    let by_rank = match method {
        ValidateMethod::Rank | ValidateMethod::Both => Some(is_valid_by_rank(&p, &l)?),
        ValidateMethod::Enum => None,
    };
    let verdicts: Vec<bool> = [by_enum.as_ref().map(Verdict::is_valid), by_rank.as_ref().map(Verdict::is_valid)]
        .into_iter()
        .flatten()
        .collect();
    if verdicts.windows(2).any(|w| w[0] != w[1]) {
        bail!("internal error: enumeration and rank checks disagree");
    }
    let valid = verdicts[0];
    let mut text = format!("valid: {valid}\n");
    let mut json = json!({ "valid": valid, "codelength": l.codelength() });
    if let Some(Verdict::Invalid(z)) = &by_enum {
        writeln!(text, "witness: z = {} is interfering and zL = 0", vec_text(z)).unwrap();
        json["enumeration_witness"] = json!(z);
    }
    if let Some(Verdict::Invalid(w)) = &by_rank {
        writeln!(
            text,
            "witness: user {}, rows {} are dependent modulo the rows of its interference",
            w.user + 1,
            w.subset
        )
        .unwrap();
        json["rank_witness"] = json!({ "user": w.user + 1, "subset": w.subset });
    }
    Ok(Report { text, json, code: if valid { 0 } else { 2 } })
}

fn solve(problem: &str, method: SolveMethod, n_max: Option<usize>, out: Option<&Path>) -> Result<Report> {
    let p = input::problem(problem)?;
    match method {
        SolveMethod::Subspace => {
            let r = optimal_codelength_subspace(&p)?;
            if let Some(path) = out {
                write_matrix(path, &r.encoder)?;
            }
            let text = format!("N_opt = {}\nencoder:\n{}", r.n_opt, r.encoder.to_text());
            let json = json!({ "n_opt": r.n_opt, "n": p.n(), "encoder": r.encoder.row_vecs() });
            Ok(Report::ok(text, json))
        }
        SolveMethod::Exhaustive => {
            if out.is_some() {
                return Err(UsageError("--out needs --method subspace".into()).into());
            }
            let cap = n_max.unwrap_or(p.n());
            let r = optimal_codelength_exhaustive(&p, cap)?;
            let text = match r {
                Some(n) => format!("N_opt = {n}\n"),
                None => format!("no valid encoder with at most {cap} columns\n"),
            };
            Ok(Report::ok(text, json!({ "n_opt": r, "n_max": cap })))
        }
    }
}

fn bounds(problem: &str, oracle: bool) -> Result<Report> {
    let p = input::problem(problem)?;
    let r = bounds_report(&p, oracle);
    let mut text = String::new();
    for e in &r.entries {
        let v = e.value.map_or("unknown".to_string(), |v| v.to_string());
        write!(text, "{:<20} {:>7}  {}", e.name, v, e.source).unwrap();
        if !e.witness.is_empty() {
            write!(text, ": {}", e.witness).unwrap();
        }
        text.push('\n');
    }
    writeln!(text, "best lower bound: {}", r.best_lower()).unwrap();
    writeln!(text, "best upper bound: {}", r.best_upper()).unwrap();
    if let Some(o) = r.oracle {
        writeln!(text, "N_opt = {o}").unwrap();
    }
    writeln!(text, "consistent: {}", r.consistent).unwrap();
    let mut json = serde_json::to_value(&r)?;
    json["best_lower"] = json!(r.best_lower());
    json["best_upper"] = json!(r.best_upper());
    Ok(Report { text, json, code: if r.consistent { 0 } else { 1 } })
}

fn blocks_json(blocks: &[Block]) -> Value {
    blocks.iter().map(|b| json!({ "set": b.set, "saved": b.saved })).collect()
}

fn construct(problem: &str, scheme: Scheme, out: Option<&Path>) -> Result<Report> {
    let p = input::problem(problem)?;
    let (c, extra): (Construction, Option<String>) = match scheme {
        Scheme::Simple => {
            let l = simple_scheme(&p)?;
            (Construction { blocks: vec![Block { set: p.all(), saved: 1 }], encoder: l }, None)
        }
        Scheme::Mds => (upper_bound_mds(&p).map_err(|u| anyhow::anyhow!("unavailable: {}", u.0))?, None),
        Scheme::Disjoint => {
            let (c, coll) = upper_bound_disjoint(&p);
            let note = format!("collection {} ({})", sets_text(&coll.sets), mode_text(&coll.mode));
            (c, Some(note))
        }
        Scheme::MdsDisjoint => {
            let (c, coll) = upper_bound_mds_disjoint(&p).map_err(|u| anyhow::anyhow!("unavailable: {}", u.0))?;
            let note = format!("collection {} ({})", sets_text(&coll.sets), mode_text(&coll.mode));
            (c, Some(note))
        }
        Scheme::Partition => {
            let r = partition_optimizer(&p).map_err(|u| anyhow::anyhow!("unavailable: {}", u.0))?;
            let note = format!("partition {} ({}), sum of d_C = {}", sets_text(&r.parts), mode_text(&r.mode), r.d_sum);
            (r.construction, Some(note))
        }
    };
    let valid = is_valid_by_rank(&p, &c.encoder).map(|v| v.is_valid()).ok();
    if valid == Some(false) {
        bail!("internal error: constructed encoder is not valid");
    }
    if let Some(path) = out {
        write_matrix(path, &c.encoder)?;
    }
    let mut text = format!("N = {} (n = {}, saves {})\n", c.length(), p.n(), p.n() - c.length());
    for b in &c.blocks {
        writeln!(text, "block {} saves {}", b.set, b.saved).unwrap();
    }
    if let Some(note) = &extra {
        writeln!(text, "{note}").unwrap();
    }
    match valid {
        Some(true) => text.push_str("revalidated: true\n"),
        _ => text.push_str("revalidated: skipped (rank-check guard)\n"),
    }
    text.push_str("encoder:\n");
    text.push_str(&c.encoder.to_text());
    let json = json!({
        "n": p.n(),
        "codelength": c.length(),
        "blocks": blocks_json(&c.blocks),
        "note": extra,
        "revalidated": valid,
        "encoder": c.encoder.row_vecs(),
    });
    Ok(Report::ok(text, json))
}

fn mode_text(m: &bnsi_core::SearchMode) -> &'static str {
    match m {
        bnsi_core::SearchMode::Exact => "exact",
        bnsi_core::SearchMode::Greedy => "greedy",
    }
}

fn analyze(problem: &str) -> Result<Report> {
    let p = input::problem(problem)?;
    let e = phi_emptiness(&p);
    let bmax = b_max(&p);
    let coll = disjoint_phi_collection(&p);
    let mut text = format!("Phi empty: {}\n", e.is_empty);
    match e.witness {
        Some(c) => writeln!(text, "C_max: {c}").unwrap(),
        None => text.push_str("C_max: none\n"),
    }
    match &bmax {
        Ok(b) => writeln!(text, "B_max: {b} (size {})", b.len()).unwrap(),
        Err(err) => writeln!(text, "B_max: unknown ({err})").unwrap(),
    }
    writeln!(text, "disjoint collection: {} ({})", sets_text(&coll.sets), mode_text(&coll.mode)).unwrap();
    let lints = p.lints();
    for l in &lints {
        writeln!(text, "warning: {l}").unwrap();
    }
    let json = json!({
        "phi_empty": e.is_empty,
        "c_max": e.witness,
        "b_max": bmax.as_ref().ok(),
        "b_max_size": bmax.as_ref().ok().map(|b| b.len()),
        "disjoint_collection": coll,
        "lints": lints,
    });
    Ok(Report::ok(text, json))
}

fn decode(problem: &str, matrix: &str, user: usize, codeword: &str, sideinfo: &str, show_table: bool) -> Result<Report> {
    let p = input::problem(problem)?;
    let l = input::matrix(matrix, &p)?;
    if user == 0 || user > p.m() {
        return Err(UsageError(format!("--user must be between 1 and {}", p.m())).into());
    }
    let c = input::vector(codeword, "codeword")?;
    let side = input::vector(sideinfo, "side information")?;
    if let Some(bad) = c.iter().chain(&side).find(|&&x| !p.field().contains(x)) {
        return Err(input::InputError(format!("{bad} is not an element of GF({})", p.q())).into());
    }
    let dec = build_decoder(&p, &l, user - 1)?;
    let syndrome = dec.syndrome(&c, &side)?;
    let x = dec.decode(&c, &side)?;
    let f = p.field();
    let eps: Vec<Elem> = side.iter().zip(&x).map(|(&a, &b)| f.sub(a, b)).collect();
    let mut text = format!(
        "user {user} demands {}\nsyndrome: {}\nerror estimate: {}\ndecoded: {}\n",
        dec.demand(),
        vec_text(&syndrome),
        vec_text(&eps),
        vec_text(&x)
    );
    let mut json = json!({
        "user": user,
        "demand": dec.demand(),
        "syndrome": syndrome,
        "error": eps,
        "decoded": x,
    });
    if show_table {
        writeln!(text, "beta: {}", dec.beta()).unwrap();
        text.push_str("H:\n");
        for row in dec.h().row_vecs() {
            writeln!(text, "  {}", vec_text(&row)).unwrap();
        }
        match dec.table() {
            Some(t) => {
                text.push_str("table:\n");
                for (e, s) in t {
                    writeln!(text, "  {} -> {}", vec_text(e), vec_text(s)).unwrap();
                }
                json["table"] = t.iter().map(|(e, s)| json!({ "error": e, "syndrome": s })).collect();
            }
            None => text.push_str("table: not materialised (too large)\n"),
        }
        json["beta"] = json!(dec.beta());
        json["h"] = json!(dec.h().row_vecs());
    }
    Ok(Report::ok(text, json))
}

fn reduce(problem: &str, out: Option<&Path>) -> Result<Report> {
    let p = input::problem(problem)?;
    let ic = reduce_to_ic(&p);
    let file = ic.to_toml();
    let summary = format!(
        "index-coding users: {} generated ({} by formula), {} distinct\n",
        ic.m_generated(),
        ic.m_hat_formula(),
        ic.m_distinct()
    );
    let text = match out {
        Some(path) => {
            std::fs::write(path, &file).with_context(|| format!("writing {}", path.display()))?;
            summary
        }
        None => format!("{summary}{file}"),
    };
    let users: Vec<Value> = ic
        .users()
        .iter()
        .map(|u| json!({ "demand": u.demand + 1, "side_info": u.side_info }))
        .collect();
    let json = json!({
        "n": ic.n(),
        "m_generated": ic.m_generated(),
        "m_hat_formula": ic.m_hat_formula() as u64,
        "m_distinct": ic.m_distinct(),
        "users": users,
    });
    Ok(Report::ok(text, json))
}

fn sim(problem: &str, matrix: &str, trials: u64, seed: u64, fault_injection: bool) -> Result<Report> {
    let p = input::problem(problem)?;
    let l = input::matrix(matrix, &p)?;
    let r = simulate(&p, &l, trials, seed, fault_injection)?;
    let mut text = format!(
        "trials: {}, seed: {}\nchannel uses: N = {} vs n = {}, savings {}\n",
        r.trials, r.seed, r.codelength, r.n, r.savings
    );
    for u in &r.users {
        writeln!(text, "user {}: {} successes, {} failures", u.user, u.successes, u.failures).unwrap();
    }
    let failures = r.total_failures();
    let code = if failures > 0 && !fault_injection {
        text.push_str("error: decoding failed within the error budget\n");
        1
    } else {
        0
    };
    Ok(Report { text, json: serde_json::to_value(&r)?, code })
}
