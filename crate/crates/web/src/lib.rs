//! Browser bindings. Every export returns a JSON string; errors come back
//! as plain messages.

use galorb::altcount::{frobenius_rank, prop8_lower_bound};
use galorb::arith::prime_power;
use galorb::classtheory::analyze;
use galorb::matgroup::projective_line_action;
use galorb::permgroup::{conjugacy_classes, ClassLimits};
use galorb::screening::{exception_set, Family};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest `n` the rank table accepts; keeps the page responsive.
pub const MAX_RANK_N: u64 = 150;
/// Largest field size for the projective line demo.
pub const MAX_PSL_Q: u64 = 64;
pub const MAX_SCREEN_N: u64 = 60;
pub const MAX_SCREEN_Q: u64 = 256;

#[derive(Serialize)]
struct RankRow {
    n: u64,
    rank: u64,
    bound: Option<String>,
}

pub fn rank_table(lo: u64, hi: u64) -> Result<String, String> {
    if lo == 0 || lo > hi || hi > MAX_RANK_N {
        return Err(format!("need 1 <= lo <= hi <= {MAX_RANK_N}"));
    }
    let mut rows = Vec::new();
    for n in lo..=hi {
        let rank = frobenius_rank(n).map_err(|e| e.to_string())?;
        let bound = if n >= 26 { Some(prop8_lower_bound(n).map_err(|e| e.to_string())?.bound.to_string()) } else { None };
        rows.push(RankRow { n, rank, bound });
    }
    Ok(serde_json::to_string(&rows).expect("rows serialize"))
}

#[derive(Serialize)]
struct ClassRow {
    label: String,
    size: String,
    order: u64,
}

#[derive(Serialize)]
struct Psl2Report {
    q: u64,
    order: String,
    classes: Vec<ClassRow>,
    families: Vec<Vec<usize>>,
    rank: usize,
    f: usize,
    is_cut: bool,
}

pub fn psl2_report(q: u64) -> Result<String, String> {
    if !(2..=MAX_PSL_Q).contains(&q) || prime_power(q).is_none() {
        return Err(format!("q must be a prime power in 2..={MAX_PSL_Q}"));
    }
    let spec = projective_line_action(q).map_err(|e| e.to_string())?;
    let cs = conjugacy_classes(&spec, &ClassLimits::default()).map_err(|e| e.to_string())?;
    let r = analyze(&cs).map_err(|e| e.to_string())?;
    let classes = cs
        .classes
        .iter()
        .map(|c| ClassRow { label: c.label.clone(), size: c.size.to_string(), order: c.order })
        .collect();
    let report =
        Psl2Report { q, order: cs.group_order.to_string(), classes, families: r.families, rank: r.rank, f: r.f, is_cut: r.is_cut };
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

pub fn screen_report(family: &str, n_max: u64, q_max: u64) -> Result<String, String> {
    let family: Family = family.parse().map_err(|e: galorb::screening::ScreenError| e.to_string())?;
    if n_max == 0 || q_max < 2 || n_max > MAX_SCREEN_N || q_max > MAX_SCREEN_Q {
        return Err(format!("box must lie within n <= {MAX_SCREEN_N}, 2 <= q <= {MAX_SCREEN_Q}"));
    }
    Ok(serde_json::to_string(&exception_set(family, n_max, q_max)).expect("report serializes"))
}

#[wasm_bindgen]
pub fn an_rank_table(lo: u32, hi: u32) -> Result<String, JsValue> {
    rank_table(lo.into(), hi.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn psl2_orbits(q: u32) -> Result<String, JsValue> {
    psl2_report(q.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn screen_family(family: &str, n_max: u32, q_max: u32) -> Result<String, JsValue> {
    screen_report(family, n_max.into(), q_max.into()).map_err(|e| JsValue::from_str(&e))
}
