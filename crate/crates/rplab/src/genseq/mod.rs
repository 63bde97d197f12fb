//! Irredundant generating sequences, the replacement-property checker and
//! the general-position machinery over maximal subgroups.

pub mod rp;
pub mod search;

pub use rp::{rp_check, RpReport, RpStats, RpWitness};
pub use search::{
    count_length4_up_to_aut, group_satisfies_rp, max_irredundant_length, GroupRpStatus,
    MSearchResult,
};

use crate::groups::{
    all_maximal_overgroups, closure_codes, maximal_overgroup, Closure, Subgroup,
};
use crate::psl2::{GroupCtx, GroupError};
use serde::{Deserialize, Serialize};

/// Search caps and budgets threaded through every enumeration-heavy
/// operation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Budgets {
    /// Maximum closure size before a computation is abandoned.
    pub closure_cap: u64,
    /// Node budget for the irredundant-sequence search.
    pub m_nodes: u64,
    /// Depth guard for the sequence search.
    pub depth_cap: usize,
    /// Ambient order up to which maximal-overgroup enumeration is exhaustive.
    pub exhaustive_overgroups_below: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            closure_cap: 3_000_000,
            m_nodes: 200_000_000,
            depth_cap: 7,
            exhaustive_overgroups_below: 10_000,
        }
    }
}

/// Where a sequence lives: the whole ambient group, or a subgroup of it
/// treated as the group under study.
#[derive(Clone, Copy)]
pub enum Universe<'a> {
    Group(&'a GroupCtx),
    Sub(&'a Subgroup<'a>),
}

impl<'a> Universe<'a> {
    pub fn ctx(&self) -> &'a GroupCtx {
        match self {
            Universe::Group(ctx) => ctx,
            Universe::Sub(sg) => sg.ctx,
        }
    }

    pub fn order(&self) -> u64 {
        match self {
            Universe::Group(ctx) => ctx.order,
            Universe::Sub(sg) => sg.order(),
        }
    }

    pub fn elems(&self) -> &'a [u64] {
        match self {
            Universe::Group(ctx) => ctx.elems(),
            Universe::Sub(sg) => sg.codes(),
        }
    }

    pub fn contains(&self, code: u64) -> bool {
        match self {
            Universe::Group(ctx) => ctx.index_of(code).is_some(),
            Universe::Sub(sg) => sg.contains(code),
        }
    }

    /// A generating set of the universe, for conjugacy-class computations.
    pub fn gens(&self, cap: u64) -> Vec<u64> {
        match self {
            Universe::Sub(sg) => sg.gens().to_vec(),
            Universe::Group(ctx) => {
                let mut gens: Vec<u64> = Vec::new();
                let mut have: Vec<u64> = vec![ctx.identity().code];
                for &c in ctx.elems() {
                    if have.binary_search(&c).is_ok() {
                        continue;
                    }
                    gens.push(c);
                    match closure_codes(ctx, &gens, &have, ctx.order, cap)
                        .expect("within ambient")
                    {
                        Closure::Full => return gens,
                        Closure::Proper(codes) => have = codes,
                    }
                }
                gens
            }
        }
    }
}

/// An ordered sequence of group elements, the object the replacement
/// property speaks about.
#[derive(Clone)]
pub struct GenSequence<'a> {
    pub universe: Universe<'a>,
    pub items: Vec<u64>,
}

impl<'a> GenSequence<'a> {
    pub fn new(universe: Universe<'a>, items: Vec<u64>) -> Result<Self, GroupError> {
        assert!(!items.is_empty(), "sequences are nonempty");
        if items.iter().any(|&c| !universe.contains(c)) {
            return Err(GroupError::MixedContexts);
        }
        Ok(GenSequence { universe, items })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Subgroup generated by all items except slot `i`.
    pub fn others_closure(&self, i: usize, cap: u64) -> Result<Subgroup<'a>, GroupError> {
        let gens: Vec<u64> = self
            .items
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &c)| c)
            .collect();
        let ctx = self.universe.ctx();
        match closure_codes(ctx, &gens, &[], self.universe.order(), cap)? {
            Closure::Full => Ok(self.universe_subgroup()),
            Closure::Proper(codes) => Ok(Subgroup::from_sorted_codes(ctx, codes)),
        }
    }

    fn universe_subgroup(&self) -> Subgroup<'a> {
        match self.universe {
            Universe::Group(ctx) => Subgroup::whole_group(ctx),
            Universe::Sub(sg) => sg.clone(),
        }
    }

    /// True iff each item lies outside the closure of the others; the
    /// certificate is the first violating slot.
    pub fn irredundance(&self, cap: u64) -> Result<Irredundance<'a>, GroupError> {
        let mut others = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            others.push(self.others_closure(i, cap)?);
        }
        let violating_slot =
            (0..self.len()).find(|&i| others[i].contains(self.items[i]));
        Ok(Irredundance { irredundant: violating_slot.is_none(), violating_slot, others })
    }

    /// True iff the items generate the whole universe.
    pub fn is_generating(&self, cap: u64) -> Result<bool, GroupError> {
        let ctx = self.universe.ctx();
        match closure_codes(ctx, &self.items, &[], self.universe.order(), cap)? {
            Closure::Full => Ok(true),
            Closure::Proper(codes) => Ok(codes.len() as u64 == self.universe.order()),
        }
    }
}

/// Outcome of an irredundance check, with the leave-one-out closures that
/// witnessed it.
pub struct Irredundance<'a> {
    pub irredundant: bool,
    pub violating_slot: Option<usize>,
    pub others: Vec<Subgroup<'a>>,
}

/// A family of subgroups is in general position when dropping any one member
/// strictly enlarges the total intersection.
pub fn general_position_check(subs: &[Subgroup]) -> bool {
    assert!(subs.len() >= 2, "general position needs at least two subgroups");
    let total = subs
        .iter()
        .skip(1)
        .fold(subs[0].clone(), |acc, s| acc.intersect(s));
    (0..subs.len()).all(|j| {
        let mut loo: Option<Subgroup> = None;
        for (i, s) in subs.iter().enumerate() {
            if i == j {
                continue;
            }
            loo = Some(match loo {
                None => s.clone(),
                Some(acc) => acc.intersect(s),
            });
        }
        loo.expect("len >= 2").order() > total.order()
    })
}

/// A tuple of maximal subgroups in general position, one per slot, plus
/// their common intersection.
pub struct GpTuple<'a> {
    pub members: Vec<Subgroup<'a>>,
    pub common: Subgroup<'a>,
}

pub struct GpTuples<'a> {
    pub tuples: Vec<GpTuple<'a>>,
    pub exhaustive: bool,
}

/// For each seed, extends the leave-one-out subgroups of `s` to maximal
/// subgroups and keeps the tuples that are in general position. Below the
/// exhaustive threshold every combination of maximal overgroups is formed
/// instead.
pub fn gp_maximal_tuples<'a>(
    s: &GenSequence<'a>,
    seeds: &[u64],
    budgets: &Budgets,
) -> Result<GpTuples<'a>, GroupError> {
    let ctx = match s.universe {
        Universe::Group(ctx) => ctx,
        Universe::Sub(_) => panic!("maximal tuples are defined over the full group"),
    };
    let irr = s.irredundance(budgets.closure_cap)?;
    assert!(irr.irredundant, "sequence must be irredundant");
    let k = s.len();

    let mut tuples: Vec<GpTuple<'a>> = Vec::new();
    let exhaustive = ctx.order <= budgets.exhaustive_overgroups_below;
    if exhaustive {
        let per_slot: Vec<Vec<Subgroup<'a>>> = irr
            .others
            .iter()
            .map(|h| all_maximal_overgroups(h, budgets.closure_cap))
            .collect::<Result<_, _>>()?;
        let mut idx = vec![0usize; k];
        'outer: loop {
            let members: Vec<Subgroup<'a>> =
                (0..k).map(|i| per_slot[i][idx[i]].clone()).collect();
            if general_position_check(&members) {
                let common = members
                    .iter()
                    .skip(1)
                    .fold(members[0].clone(), |acc, m| acc.intersect(m));
                tuples.push(GpTuple { members, common });
            }
            // Advance the mixed-radix counter.
            for i in 0..k {
                idx[i] += 1;
                if idx[i] < per_slot[i].len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
    } else {
        for &seed in seeds {
            let members: Vec<Subgroup<'a>> = irr
                .others
                .iter()
                .map(|h| maximal_overgroup(h, seed, budgets.closure_cap))
                .collect::<Result<_, _>>()?;
            if general_position_check(&members) {
                let common = members
                    .iter()
                    .skip(1)
                    .fold(members[0].clone(), |acc, m| acc.intersect(m));
                tuples.push(GpTuple { members, common });
            }
        }
        // Distinct tuples only.
        tuples.sort_by(|a, b| {
            let ka: Vec<&[u64]> = a.members.iter().map(|m| m.codes()).collect();
            let kb: Vec<&[u64]> = b.members.iter().map(|m| m.codes()).collect();
            ka.cmp(&kb)
        });
        tuples.dedup_by(|a, b| {
            a.members.len() == b.members.len()
                && a.members.iter().zip(&b.members).all(|(x, y)| x.codes() == y.codes())
        });
    }
    Ok(GpTuples { tuples, exhaustive })
}

/// Verdicts for the one-directional replacement-property criteria. The
/// converse directions are never claimed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    RpGuaranteed,
    RpLikelySampled,
    Inconclusive,
}

/// If every general-position maximal tuple intersects trivially, the
/// sequence satisfies the replacement property.
pub fn prop31_criterion(tuples: &GpTuples) -> Verdict {
    if tuples.tuples.is_empty() {
        return Verdict::Inconclusive;
    }
    let all_trivial = tuples.tuples.iter().all(|t| t.common.order() == 1);
    if !all_trivial {
        Verdict::Inconclusive
    } else if tuples.exhaustive {
        Verdict::RpGuaranteed
    } else {
        Verdict::RpLikelySampled
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Prop32Outcome {
    pub verdict: Verdict,
    pub slot: usize,
    pub member_equals_others: bool,
    pub member_m: Option<u64>,
    pub member_m_exhaustive: bool,
    pub member_satisfies_rp: Option<bool>,
}

/// The second criterion: slot `r`'s maximal member equals the closure of the
/// other generators, has `m = k-1`, and itself satisfies the replacement
/// property; all three together force RP for the sequence.
pub fn prop32_criterion<'a>(
    s: &GenSequence<'a>,
    tuple: &GpTuple<'a>,
    r: usize,
    budgets: &Budgets,
) -> Result<Prop32Outcome, GroupError> {
    let k = s.len();
    assert!(r < k && tuple.members.len() == k);
    let irr = s.irredundance(budgets.closure_cap)?;
    let m_r = &tuple.members[r];

    let hyp1 = m_r.codes() == irr.others[r].codes();
    if !hyp1 {
        return Ok(Prop32Outcome {
            verdict: Verdict::Inconclusive,
            slot: r,
            member_equals_others: false,
            member_m: None,
            member_m_exhaustive: false,
            member_satisfies_rp: None,
        });
    }

    let uni = Universe::Sub(m_r);
    let msr = max_irredundant_length(uni, budgets)?;
    let hyp2 = msr.exhaustive && msr.m as u64 == (k - 1) as u64;
    if !hyp2 {
        return Ok(Prop32Outcome {
            verdict: Verdict::Inconclusive,
            slot: r,
            member_equals_others: true,
            member_m: Some(msr.m as u64),
            member_m_exhaustive: msr.exhaustive,
            member_satisfies_rp: None,
        });
    }

    let status = group_satisfies_rp(uni, budgets)?;
    let hyp3 = status.exhaustive && status.satisfies;
    Ok(Prop32Outcome {
        verdict: if hyp3 { Verdict::RpGuaranteed } else { Verdict::Inconclusive },
        slot: r,
        member_equals_others: true,
        member_m: Some(msr.m as u64),
        member_m_exhaustive: true,
        member_satisfies_rp: Some(status.satisfies),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use crate::psl2::{GroupCtx, GroupKind, Mat2};

    fn budgets() -> Budgets {
        Budgets::default()
    }

    fn sl23() -> GroupCtx {
        GroupCtx::new(FieldCtx::new(3, 1).unwrap(), GroupKind::Sl)
    }

    #[test]
    fn quaternion_pair_is_irredundant_generating_in_q8() {
        let ctx = sl23();
        ctx.enumerate(1000).unwrap();
        let f = &ctx.field;
        let i = ctx.canonicalize(&Mat2::new(f.zero(), f.minus_one(), f.one(), f.zero())).unwrap();
        let j = ctx.canonicalize(&Mat2::new(f.one(), f.one(), f.one(), f.minus_one())).unwrap();
        let q8 = Subgroup::generate(&ctx, &[i, j], 1000).unwrap();
        assert_eq!(q8.order(), 8);
        let uni = Universe::Sub(&q8);
        let s = GenSequence::new(uni, vec![i.code, j.code]).unwrap();
        let irr = s.irredundance(1000).unwrap();
        assert!(irr.irredundant);
        assert!(s.is_generating(1000).unwrap());
    }

    #[test]
    fn duplicate_items_are_redundant() {
        let ctx = sl23();
        ctx.enumerate(1000).unwrap();
        let f = &ctx.field;
        let i = ctx.canonicalize(&Mat2::new(f.zero(), f.minus_one(), f.one(), f.zero())).unwrap();
        let s = GenSequence::new(Universe::Group(&ctx), vec![i.code, i.code]).unwrap();
        let irr = s.irredundance(1000).unwrap();
        assert!(!irr.irredundant);
        assert_eq!(irr.violating_slot, Some(0));
    }

    #[test]
    fn power_of_generator_is_redundant() {
        // (g, g^2) for g of order 4.
        let ctx = sl23();
        ctx.enumerate(1000).unwrap();
        let f = &ctx.field;
        let g = ctx.canonicalize(&Mat2::new(f.zero(), f.minus_one(), f.one(), f.zero())).unwrap();
        assert_eq!(ctx.element_order(&g), 4);
        let g2 = ctx.mul(&g, &g);
        let s = GenSequence::new(Universe::Group(&ctx), vec![g.code, g2.code]).unwrap();
        assert!(!s.irredundance(1000).unwrap().irredundant);
    }

    #[test]
    fn single_involution_does_not_generate_psl27() {
        let ctx = GroupCtx::new(FieldCtx::new(7, 1).unwrap(), GroupKind::Psl);
        ctx.enumerate(10_000).unwrap();
        let w = ctx
            .elems()
            .iter()
            .copied()
            .find(|&c| ctx.element_order(&ctx.elem_from_code(c)) == 2)
            .unwrap();
        let s = GenSequence::new(Universe::Group(&ctx), vec![w]).unwrap();
        assert!(!s.is_generating(10_000).unwrap());
    }

    #[test]
    fn general_position_basics() {
        let ctx = GroupCtx::new(FieldCtx::new(7, 1).unwrap(), GroupKind::Psl);
        ctx.enumerate(10_000).unwrap();
        // Two equal subgroups are never in general position.
        let u = ctx.canonicalize(&Mat2::new(
            ctx.field.one(),
            ctx.field.one(),
            ctx.field.zero(),
            ctx.field.one(),
        ))
        .unwrap();
        let h = Subgroup::generate(&ctx, &[u], 10_000).unwrap();
        assert!(!general_position_check(&[h.clone(), h.clone()]));
        // Any tuple containing the full group fails: dropping it changes
        // nothing.
        let g = Subgroup::whole_group(&ctx);
        assert!(!general_position_check(&[h, g]));
    }

    #[test]
    fn canonical_leave_one_out_subgroups_are_in_general_position() {
        // For an irredundant sequence the H_i are in general position.
        let ctx = sl23();
        ctx.enumerate(1000).unwrap();
        let f = &ctx.field;
        let i = ctx.canonicalize(&Mat2::new(f.zero(), f.minus_one(), f.one(), f.zero())).unwrap();
        let j = ctx.canonicalize(&Mat2::new(f.one(), f.one(), f.one(), f.minus_one())).unwrap();
        let q8 = Subgroup::generate(&ctx, &[i, j], 1000).unwrap();
        let uni = Universe::Sub(&q8);
        let s = GenSequence::new(uni, vec![i.code, j.code]).unwrap();
        let irr = s.irredundance(1000).unwrap();
        assert!(irr.irredundant);
        assert!(general_position_check(&irr.others));
    }

    #[test]
    fn prop31_on_exhaustive_tuples_in_psl27() {
        // Find an irredundant generating triple whose exhaustive maximal
        // tuples all intersect trivially; its verdict must be guaranteed and
        // rp_check must agree.
        let ctx = GroupCtx::new(FieldCtx::new(7, 1).unwrap(), GroupKind::Psl);
        ctx.enumerate(10_000).unwrap();
        let b = budgets();
        let elems = ctx.elems().to_vec();
        let mut tested = 0;
        for &a in elems.iter().step_by(7) {
            for &bb in elems.iter().step_by(11) {
                for &c in elems.iter().step_by(13) {
                    let s = match GenSequence::new(Universe::Group(&ctx), vec![a, bb, c]) {
                        Ok(s) => s,
                        Err(_) => continue,
                    };
                    let irr = s.irredundance(b.closure_cap).unwrap();
                    if !irr.irredundant || !s.is_generating(b.closure_cap).unwrap() {
                        continue;
                    }
                    let tuples = gp_maximal_tuples(&s, &[], &b).unwrap();
                    assert!(tuples.exhaustive);
                    let verdict = prop31_criterion(&tuples);
                    if verdict == Verdict::RpGuaranteed {
                        let report = rp_check(&s, &b).unwrap();
                        assert!(report.satisfies_rp, "guaranteed verdict must agree with rp_check");
                        return;
                    }
                    tested += 1;
                    if tested > 40 {
                        // Plenty of triples examined without a guaranteed
                        // verdict; accept as long as none contradicted.
                        return;
                    }
                }
            }
        }
    }
}
