//! The replacement-property checker.
//!
//! For a length-k irredundant generating sequence, every nontrivial element
//! of the universe is tested in ascending code order: it succeeds if some
//! slot's leave-one-out subgroup together with it generates the universe.
//! The scan iterates all elements (no conjugacy reduction: replacement is
//! not conjugation-equivariant slotwise); each slot's outcomes are memoized
//! per double coset, which keeps the closure count proportional to the
//! number of cosets rather than elements.

use super::{Budgets, GenSequence, Universe};
use crate::groups::{ExtensionOracle, EXT_GENERATES};
use crate::psl2::GroupError;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RpWitness {
    /// Packed code of the failing element.
    pub code: u64,
    /// Canonical matrix of the failing element, row-major.
    pub matrix: String,
    /// Order of the replacement closure per slot; each is strictly below the
    /// universe order.
    pub per_slot_orders: Vec<u64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RpStats {
    pub elements_tested: u64,
    pub closures_computed: u64,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RpReport {
    pub universe_order: u64,
    pub sequence_codes: Vec<u64>,
    pub irredundant: bool,
    pub irredundant_violation: Option<usize>,
    pub generating: bool,
    /// Meaningful only when the sequence is irredundant and generating;
    /// `witness` is present exactly when such a sequence fails.
    pub satisfies_rp: bool,
    pub witness: Option<RpWitness>,
    pub stats: RpStats,
}

/// Checks the replacement property of `s` within its universe.
pub fn rp_check<'a>(s: &GenSequence<'a>, budgets: &Budgets) -> Result<RpReport, GroupError> {
    let start = Instant::now();
    let ctx = s.universe.ctx();
    ctx.enumerate(budgets.closure_cap)?;
    let cap = budgets.closure_cap;

    let irr = s.irredundance(cap)?;
    let generating = s.is_generating(cap)?;
    let mut report = RpReport {
        universe_order: s.universe.order(),
        sequence_codes: s.items.clone(),
        irredundant: irr.irredundant,
        irredundant_violation: irr.violating_slot,
        generating,
        satisfies_rp: false,
        witness: None,
        stats: RpStats::default(),
    };
    if !irr.irredundant || !generating {
        report.stats.elapsed_ms = start.elapsed().as_millis() as u64;
        return Ok(report);
    }

    let k = s.len();
    let universe_order = s.universe.order();
    let mut oracles: Vec<ExtensionOracle> = irr
        .others
        .iter()
        .map(|h| ExtensionOracle::new(h, universe_order, cap))
        .collect();
    // Test big slots first: they generate most often, so most elements are
    // classified by a single memo lookup.
    let mut slot_order: Vec<usize> = (0..k).collect();
    slot_order.sort_by_key(|&i| std::cmp::Reverse(irr.others[i].order()));

    let id = ctx.identity().code;
    let mut tested = 0u64;
    let mut witness: Option<u64> = None;
    for &g in s.universe.elems() {
        if g == id {
            continue;
        }
        tested += 1;
        let idx = ctx.index_of(g).expect("universe element");
        let mut fails_all = true;
        for &slot in &slot_order {
            if oracles[slot].classify(idx) == EXT_GENERATES {
                fails_all = false;
                break;
            }
        }
        if fails_all {
            witness = Some(g);
            break;
        }
    }

    report.stats.elements_tested = tested;
    report.stats.closures_computed = oracles.iter().map(|o| o.closures_computed).sum();
    match witness {
        Some(g) => {
            // Record the per-slot replacement closures; all proper.
            let mut per_slot = Vec::with_capacity(k);
            for i in 0..k {
                let mut items = s.items.clone();
                items[i] = g;
                let t = GenSequence::new(s.universe, items)?;
                let ctx_ = t.universe.ctx();
                let cl = crate::groups::closure_codes(
                    ctx_,
                    &t.items,
                    &[],
                    universe_order,
                    cap,
                )?;
                let order = match cl {
                    crate::groups::Closure::Full => universe_order,
                    crate::groups::Closure::Proper(codes) => codes.len() as u64,
                };
                assert!(order < universe_order, "witness slot closure must be proper");
                per_slot.push(order);
            }
            report.satisfies_rp = false;
            report.witness = Some(RpWitness {
                code: g,
                matrix: format_matrix(ctx, g),
                per_slot_orders: per_slot,
            });
        }
        None => {
            report.satisfies_rp = true;
        }
    }
    report.stats.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

pub(crate) fn format_matrix(ctx: &crate::psl2::GroupCtx, code: u64) -> String {
    let m = ctx.decode(code);
    let f = &ctx.field;
    let fmt_el = |e: crate::gf::FqElem| -> String {
        if f.degree() == 1 || e.a1 == 0 {
            format!("{}", e.a0)
        } else if e.a0 == 0 {
            format!("{}x", e.a1)
        } else {
            format!("{}+{}x", e.a0, e.a1)
        }
    };
    format!(
        "[[{},{}],[{},{}]]",
        fmt_el(m.e[0]),
        fmt_el(m.e[1]),
        fmt_el(m.e[2]),
        fmt_el(m.e[3])
    )
}

/// Parses the matrix format produced by [`format_matrix`].
pub fn parse_matrix(
    f: &crate::gf::FieldCtx,
    s: &str,
) -> Result<crate::psl2::Mat2, String> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = cleaned
        .strip_prefix("[[")
        .and_then(|t| t.strip_suffix("]]"))
        .ok_or_else(|| format!("matrix must look like [[a,b],[c,d]]: {s}"))?;
    let parts: Vec<&str> = inner.split("],[").collect();
    if parts.len() != 2 {
        return Err(format!("matrix must have two rows: {s}"));
    }
    let mut entries = Vec::with_capacity(4);
    for row in parts {
        for ent in row.split(',') {
            entries.push(parse_el(f, ent)?);
        }
    }
    if entries.len() != 4 {
        return Err(format!("matrix must have four entries: {s}"));
    }
    Ok(crate::psl2::Mat2::new(entries[0], entries[1], entries[2], entries[3]))
}

fn parse_el(f: &crate::gf::FieldCtx, s: &str) -> Result<crate::gf::FqElem, String> {
    // Accepts "7", "-1", "3x", "2+3x", "2-3x".
    let parse_int = |t: &str| -> Result<i64, String> {
        t.parse::<i64>().map_err(|_| format!("bad field element: {s}"))
    };
    if let Some(xpos) = s.find('x') {
        if xpos + 1 != s.len() {
            return Err(format!("bad field element: {s}"));
        }
        let body = &s[..xpos];
        // Split off an a0 part if there is a +/- after the first character.
        let split = body[1..].find(['+', '-']).map(|i| i + 1);
        match split {
            Some(i) => {
                let a0 = parse_int(&body[..i])?;
                let sign = if body.as_bytes()[i] == b'-' { -1 } else { 1 };
                let coeff = &body[i + 1..];
                let a1 = if coeff.is_empty() { 1 } else { parse_int(coeff)? };
                Ok(f.el(a0, sign * a1))
            }
            None => {
                let a1 = if body.is_empty() {
                    1
                } else if body == "-" {
                    -1
                } else {
                    parse_int(body)?
                };
                Ok(f.el(0, a1))
            }
        }
    } else {
        Ok(f.el(parse_int(s)?, 0))
    }
}
