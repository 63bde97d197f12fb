//! Bounded searches over irredundant generating sequences: the maximal
//! length `m(G)`, exhaustive enumeration at a fixed length, and counting
//! length-4 sequences up to automorphism.
//!
//! The search walks sets anchored at one conjugacy-class representative
//! (conjugation preserves irredundance and generation, so every set has a
//! conjugate through an anchor); the remaining members are enumerated
//! ascending. For a candidate extension `g` of a prefix with closure `C`:
//! when `<C,g>` is everything, irredundance of the resulting generating set
//! reduces to properness of each leave-one-out closure, answered by memoized
//! extension oracles shared across the whole search; when `<C,g>` is proper,
//! the leave-one-out closures are small and are computed directly.

use super::{Budgets, GenSequence, Universe};
use crate::groups::{
    closure_codes, Closure, ExtensionOracle, IsoClass, Subgroup, EXT_GENERATES, EXT_PROPER,
};
use crate::psl2::{GroupCtx, GroupError, GroupKind, Mat2};
use std::collections::{HashMap, HashSet};
use std::sync::Mutex;
use std::sync::OnceLock;

#[derive(Clone, Debug)]
pub struct MSearchResult {
    pub m: usize,
    pub exhaustive: bool,
    /// An irredundant generating set realizing `m`, ascending codes.
    pub witness: Vec<u64>,
    pub nodes: u64,
}

/// Oracles keyed by (universe order, subgroup elements), shared across the
/// search so the expensive full-closure classifications amortize over every
/// node that meets the same subgroup.
struct OracleRegistry<'g> {
    map: HashMap<(u64, Vec<u64>), ExtensionOracle<'g>>,
    cap: u64,
}

impl<'g> OracleRegistry<'g> {
    fn new(cap: u64) -> Self {
        OracleRegistry { map: HashMap::new(), cap }
    }

    fn classify(&mut self, universe_order: u64, h: &Subgroup<'g>, code: u64) -> u8 {
        let key = (universe_order, h.codes().to_vec());
        let oracle = self
            .map
            .entry(key)
            .or_insert_with(|| ExtensionOracle::new(h, universe_order, self.cap));
        oracle.classify_code(code)
    }

    fn closures(&self) -> u64 {
        self.map.values().map(|o| o.closures_computed).sum()
    }
}

struct Search<'g> {
    uni: Universe<'g>,
    budgets: Budgets,
    registry: OracleRegistry<'g>,
    nodes: u64,
    exhausted_budget: bool,
    best_len: usize,
    best_witness: Vec<u64>,
    /// When set, collect every irredundant generating set of exactly this
    /// size instead of only tracking the maximum.
    collect_len: Option<usize>,
    collected: Vec<Vec<u64>>,
    max_depth: usize,
}

impl<'g> Search<'g> {
    fn descend(
        &mut self,
        seq: &mut Vec<u64>,
        c: &Subgroup<'g>,
        others: &[Subgroup<'g>],
        min_next: Option<u64>,
    ) {
        let ctx = self.uni.ctx();
        let k = seq.len();
        let elems = self.uni.elems();
        let start = match min_next {
            Some(lo) => elems.partition_point(|&e| e <= lo),
            None => 0,
        };
        for &g in &elems[start..] {
            if c.contains(g) || seq.contains(&g) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budgets.m_nodes {
                self.exhausted_budget = true;
                return;
            }
            let outcome = self.registry.classify(self.uni.order(), c, g);
            if outcome == EXT_GENERATES {
                // seq + g generates. Since the whole set generates,
                // irredundance is equivalent to every leave-one-out closure
                // being proper.
                if self.collect_len.is_some_and(|l| l != k + 1)
                    && self.best_len >= k + 1
                {
                    continue;
                }
                let irredundant = (0..k).all(|i| {
                    self.registry.classify(self.uni.order(), &others[i], g) == EXT_PROPER
                });
                if irredundant {
                    let mut set = seq.clone();
                    set.push(g);
                    set.sort_unstable();
                    if k + 1 > self.best_len {
                        self.best_len = k + 1;
                        self.best_witness = set.clone();
                    }
                    if self.collect_len == Some(k + 1) {
                        self.collected.push(set);
                    }
                }
            } else if k + 1 < self.max_depth {
                // Proper extension: the new closure and all leave-one-out
                // closures live inside it, so they are cheap to build.
                let c2 = self.extend(c, g);
                let mut new_others = Vec::with_capacity(k + 1);
                let mut irredundant = true;
                for i in 0..k {
                    let hi = self.extend(&others[i], g);
                    if hi.contains(seq[i]) {
                        irredundant = false;
                        break;
                    }
                    new_others.push(hi);
                }
                if !irredundant {
                    continue;
                }
                new_others.push(c.clone());
                seq.push(g);
                self.descend(seq, &c2, &new_others, Some(g));
                seq.pop();
                if self.exhausted_budget {
                    return;
                }
            }
        }
    }

    fn extend(&self, h: &Subgroup<'g>, g: u64) -> Subgroup<'g> {
        let ctx = self.uni.ctx();
        let mut gens = h.gens().to_vec();
        gens.push(g);
        match closure_codes(ctx, &gens, h.codes(), self.uni.order(), self.budgets.closure_cap)
            .expect("extension within cap")
        {
            Closure::Full => match self.uni {
                Universe::Group(ctx) => Subgroup::whole_group(ctx),
                Universe::Sub(sg) => sg.clone(),
            },
            Closure::Proper(codes) => Subgroup::from_sorted_codes(ctx, codes),
        }
    }
}

/// Conjugacy-class representatives of the universe's elements under a given
/// conjugator set (codes of elements of the ambient context).
fn class_reps_under<'g>(
    uni: &Universe<'g>,
    conjugators: &[u64],
) -> Vec<u64> {
    let ctx = uni.ctx();
    let elems = uni.elems();
    let mut visited = vec![false; elems.len()];
    let mut reps = Vec::new();
    for start in 0..elems.len() {
        if visited[start] {
            continue;
        }
        reps.push(elems[start]);
        visited[start] = true;
        let mut queue = vec![elems[start]];
        while let Some(x) = queue.pop() {
            for &g in conjugators {
                let y = ctx.conj_code(g, x);
                if let Ok(idx) = elems.binary_search(&y) {
                    if !visited[idx] {
                        visited[idx] = true;
                        queue.push(y);
                    }
                }
            }
        }
    }
    reps
}

/// Depth-first search for the maximal length of an irredundant generating
/// sequence, anchored per conjugacy class of the first element.
pub fn max_irredundant_length(
    uni: Universe<'_>,
    budgets: &Budgets,
) -> Result<MSearchResult, GroupError> {
    let ctx = uni.ctx();
    ctx.enumerate(budgets.closure_cap)?;
    let id = ctx.identity().code;
    if uni.order() == 1 {
        return Ok(MSearchResult { m: 0, exhaustive: true, witness: vec![], nodes: 0 });
    }

    let uni_gens = uni.gens(budgets.closure_cap);
    let anchors = class_reps_under(&uni, &uni_gens);
    let mut search = Search {
        uni,
        budgets: *budgets,
        registry: OracleRegistry::new(budgets.closure_cap),
        nodes: 0,
        exhausted_budget: false,
        best_len: 0,
        best_witness: vec![],
        collect_len: None,
        collected: vec![],
        max_depth: budgets.depth_cap,
    };

    for &a in &anchors {
        if a == id {
            continue;
        }
        let c1 = Subgroup::generate_codes(ctx, &[a], budgets.closure_cap)?;
        if c1.order() == uni.order() {
            // Cyclic universe generated by the anchor alone.
            if search.best_len < 1 {
                search.best_len = 1;
                search.best_witness = vec![a];
            }
            continue;
        }
        let trivial = Subgroup::from_sorted_codes(ctx, vec![id]);
        let mut seq = vec![a];
        search.descend(&mut seq, &c1, &[trivial], None);
        if search.exhausted_budget {
            break;
        }
    }

    // A witness at the depth cap means longer sequences were never explored.
    let capped = search.best_len + 1 >= budgets.depth_cap;
    Ok(MSearchResult {
        m: search.best_len,
        exhaustive: !search.exhausted_budget && !capped,
        witness: search.best_witness,
        nodes: search.nodes,
    })
}

/// All irredundant generating sets of exactly `len`, up to conjugacy of the
/// anchor (each set is found at least once; duplicates possible).
fn collect_sets_of_len<'g>(
    uni: Universe<'g>,
    len: usize,
    anchors: &[u64],
    budgets: &Budgets,
) -> Result<(Vec<Vec<u64>>, bool), GroupError> {
    let ctx = uni.ctx();
    let id = ctx.identity().code;
    let mut search = Search {
        uni,
        budgets: *budgets,
        registry: OracleRegistry::new(budgets.closure_cap),
        nodes: 0,
        exhausted_budget: false,
        best_len: 0,
        best_witness: vec![],
        collect_len: Some(len),
        collected: vec![],
        max_depth: len + 1,
    };
    for &a in anchors {
        if a == id {
            continue;
        }
        let c1 = Subgroup::generate_codes(ctx, &[a], budgets.closure_cap)?;
        if c1.order() == uni.order() {
            continue;
        }
        let trivial = Subgroup::from_sorted_codes(ctx, vec![id]);
        let mut seq = vec![a];
        search.descend(&mut seq, &c1, &[trivial], None);
        if search.exhausted_budget {
            break;
        }
    }
    let mut sets = search.collected;
    sets.sort_unstable();
    sets.dedup();
    Ok((sets, !search.exhausted_budget))
}

#[derive(Clone, Debug)]
pub struct GroupRpStatus {
    pub m: usize,
    pub exhaustive: bool,
    pub satisfies: bool,
    pub sequences_checked: u64,
    /// A length-m irredundant generating set failing RP, when one exists.
    pub failing_set: Option<Vec<u64>>,
}

static RP_STATUS_CACHE: OnceLock<Mutex<HashMap<IsoClass, (usize, bool)>>> = OnceLock::new();

fn cacheable(tag: IsoClass) -> bool {
    matches!(
        tag,
        IsoClass::Klein4
            | IsoClass::Alt4
            | IsoClass::Sym4
            | IsoClass::Alt5
            | IsoClass::Dihedral(_)
            | IsoClass::Psl2(_)
            | IsoClass::Pgl2(_)
    )
}

/// Whether the group satisfies the replacement property: every irredundant
/// generating sequence of length `m(G)` satisfies it. Verified by exhaustive
/// enumeration up to conjugacy of the first element (RP status is invariant
/// under automorphisms).
pub fn group_satisfies_rp(
    uni: Universe<'_>,
    budgets: &Budgets,
) -> Result<GroupRpStatus, GroupError> {
    let tag = match uni {
        Universe::Sub(sg) if sg.order() <= 10_000 => Some(sg.identify()),
        _ => None,
    };
    if let Some(t) = tag {
        if cacheable(t) {
            let cache = RP_STATUS_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
            if let Some(&(m, ok)) = cache.lock().unwrap().get(&t) {
                return Ok(GroupRpStatus {
                    m,
                    exhaustive: true,
                    satisfies: ok,
                    sequences_checked: 0,
                    failing_set: None,
                });
            }
        }
    }

    let msr = max_irredundant_length(uni, budgets)?;
    if !msr.exhaustive {
        return Ok(GroupRpStatus {
            m: msr.m,
            exhaustive: false,
            satisfies: false,
            sequences_checked: 0,
            failing_set: None,
        });
    }
    let uni_gens = uni.gens(budgets.closure_cap);
    let anchors = class_reps_under(&uni, &uni_gens);
    let (sets, exhaustive) = collect_sets_of_len(uni, msr.m, &anchors, budgets)?;
    let mut checked = 0u64;
    let mut failing = None;
    for set in &sets {
        let s = GenSequence::new(uni, set.clone())?;
        let report = super::rp::rp_check(&s, budgets)?;
        debug_assert!(report.irredundant && report.generating);
        checked += 1;
        if !report.satisfies_rp {
            failing = Some(set.clone());
            break;
        }
    }
    let satisfies = failing.is_none();
    if let Some(t) = tag {
        if cacheable(t) && exhaustive {
            let cache = RP_STATUS_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
            cache.lock().unwrap().insert(t, (msr.m, satisfies));
        }
    }
    Ok(GroupRpStatus {
        m: msr.m,
        exhaustive,
        satisfies,
        sequences_checked: checked,
        failing_set: failing,
    })
}

/// Counts irredundant generating sets of size 4 in `PSL(2,p)` up to the
/// action of `PGL(2,p)` (the full automorphism group) by conjugation.
pub fn count_length4_up_to_aut(p: u32, budgets: &Budgets) -> Result<u64, GroupError> {
    if ![5u32, 7, 11, 13, 17].contains(&p) {
        return Err(GroupError::CapExceeded { order: p as u64, cap: 17 });
    }
    let field = crate::gf::FieldCtx::new(p, 1).expect("supported prime");
    let psl = GroupCtx::new(field, GroupKind::Psl);
    psl.enumerate(budgets.closure_cap)?;
    let pgl = GroupCtx::new(field, GroupKind::Pgl);
    pgl.enumerate(budgets.closure_cap)?;

    // Conjugation by PGL on PSL elements: decode the PGL representative and
    // conjugate matrices directly; the result has determinant 1.
    let f = &field;
    let pgl_mats: Vec<(Mat2, Mat2)> = pgl
        .elems()
        .iter()
        .map(|&c| {
            let m = pgl.decode(c);
            let mi = m.inv(f).expect("invertible");
            (m, mi)
        })
        .collect();
    let conj_by = |mats: &(Mat2, Mat2), h: u64| -> u64 {
        let hm = psl.decode(h);
        let prod = mats.0.mul(f, &hm).mul(f, &mats.1);
        // det(prod) = det(h) = 1 even when the conjugator has nonsquare
        // determinant.
        psl.canonical_code(&prod)
    };

    // Anchor at PGL-class representatives.
    let uni = Universe::Group(&psl);
    let elems = psl.elems();
    let mut visited = vec![false; elems.len()];
    let mut anchors = Vec::new();
    for start in 0..elems.len() {
        if visited[start] {
            continue;
        }
        anchors.push(elems[start]);
        visited[start] = true;
        let mut queue = vec![elems[start]];
        while let Some(x) = queue.pop() {
            for mats in &pgl_mats {
                let y = conj_by(mats, x);
                let idx = elems.binary_search(&y).expect("conjugation stays in PSL");
                if !visited[idx] {
                    visited[idx] = true;
                    queue.push(y);
                }
            }
        }
    }

    let (sets, exhaustive) = collect_sets_of_len(uni, 4, &anchors, budgets)?;
    assert!(exhaustive, "length-4 enumeration must complete within budget");

    // Orbit-canonical form: the lexicographically least image over all of
    // PGL.
    let mut canonical: HashSet<[u64; 4]> = HashSet::new();
    for set in &sets {
        let mut best: [u64; 4] = [set[0], set[1], set[2], set[3]];
        for mats in &pgl_mats {
            let mut img = [
                conj_by(mats, set[0]),
                conj_by(mats, set[1]),
                conj_by(mats, set[2]),
                conj_by(mats, set[3]),
            ];
            img.sort_unstable();
            if img < best {
                best = img;
            }
        }
        canonical.insert(best);
    }
    Ok(canonical.len() as u64)
}
