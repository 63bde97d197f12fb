//! Subgroup machinery: breadth-first closure, structural recognition,
//! normalizers, conjugation, maximal overgroups and subfield embeddings.
//!
//! Subgroups are stored as sorted arrays of element codes, so membership is a
//! binary search and intersections are merge walks. Closures never trust any
//! classification theorem: a subgroup is exactly the set of elements reached
//! by saturating products of its generators.

mod identify;

pub use identify::{Fingerprint, IsoClass};

use crate::psl2::{GroupCtx, GroupElem, GroupError, GroupKind, Mat2};
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

/// Result of a closure computation inside an enclosing group of known order.
#[derive(Clone, Debug)]
pub enum Closure {
    /// The generators reach the whole enclosing group.
    Full,
    /// A proper subgroup, as a sorted code list.
    Proper(Vec<u64>),
}

/// Breadth-first product saturation.
///
/// Computes `<gens>` inside `ctx`. `known` must be a subset of `<gens>` that
/// is already closed (typically a previously computed subgroup); it seeds the
/// search so its elements are not re-derived. `full_order` is the order of
/// the enclosing group: once the count exceeds half of it, Lagrange forces
/// the closure to be everything and the search stops early.
pub fn closure_codes(
    ctx: &GroupCtx,
    gens: &[u64],
    known: &[u64],
    full_order: u64,
    cap: u64,
) -> Result<Closure, GroupError> {
    let half = full_order / 2;
    let id = ctx.identity().code;
    let gen_mats: Vec<Mat2> = gens.iter().map(|&c| ctx.decode(c)).collect();

    let mut queue: VecDeque<u64> = VecDeque::new();
    let mut count: u64 = 0;

    // Visited set: index-based bitmap when the ambient table exists, hash set
    // otherwise (small closures during construction).
    if ctx.is_enumerated() {
        let elems = ctx.elems();
        let mut visited = vec![0u64; (elems.len() + 63) / 64];
        let mut push = |code: u64, queue: &mut VecDeque<u64>, count: &mut u64| -> bool {
            let idx = ctx
                .index_of(code)
                .expect("closure produced an element outside the ambient group");
            let (w, b) = (idx / 64, idx % 64);
            if visited[w] >> b & 1 == 0 {
                visited[w] |= 1 << b;
                *count += 1;
                queue.push_back(code);
                true
            } else {
                false
            }
        };
        push(id, &mut queue, &mut count);
        for &c in known.iter().chain(gens) {
            push(c, &mut queue, &mut count);
        }
        while let Some(code) = queue.pop_front() {
            let m = ctx.decode(code);
            for g in &gen_mats {
                let prod = ctx.canonical_code(&m.mul(&ctx.field, g));
                if push(prod, &mut queue, &mut count) && count > half {
                    return Ok(Closure::Full);
                }
            }
            if count > cap {
                return Err(GroupError::ClosureCapExceeded(cap));
            }
        }
        if count == full_order {
            return Ok(Closure::Full);
        }
        let mut out = Vec::with_capacity(count as usize);
        for (w, &word) in visited.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(elems[w * 64 + b]);
                bits &= bits - 1;
            }
        }
        Ok(Closure::Proper(out))
    } else {
        let mut visited: HashSet<u64> = HashSet::new();
        let mut push = |code: u64, queue: &mut VecDeque<u64>, count: &mut u64| -> bool {
            if visited.insert(code) {
                *count += 1;
                queue.push_back(code);
                true
            } else {
                false
            }
        };
        push(id, &mut queue, &mut count);
        for &c in known.iter().chain(gens) {
            push(c, &mut queue, &mut count);
        }
        while let Some(code) = queue.pop_front() {
            let m = ctx.decode(code);
            for g in &gen_mats {
                let prod = ctx.canonical_code(&m.mul(&ctx.field, g));
                if push(prod, &mut queue, &mut count) && count > half {
                    return Ok(Closure::Full);
                }
            }
            if count > cap {
                return Err(GroupError::ClosureCapExceeded(cap));
            }
        }
        if count == full_order {
            return Ok(Closure::Full);
        }
        let mut out: Vec<u64> = visited.into_iter().collect();
        out.sort_unstable();
        Ok(Closure::Proper(out))
    }
}

/// A subgroup of an ambient [`GroupCtx`], closed under products and inverses.
#[derive(Debug, Clone)]
pub struct Subgroup<'g> {
    pub ctx: &'g GroupCtx,
    codes: Vec<u64>,
    gens: OnceLock<Vec<u64>>,
    fp: OnceLock<Fingerprint>,
}

impl PartialEq for Subgroup<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.codes == other.codes
    }
}
impl Eq for Subgroup<'_> {}

impl<'g> Subgroup<'g> {
    /// Smallest subgroup containing `gens`; errors if the closure is the full
    /// group and `allow_full` is false, or if it exceeds `cap`.
    pub fn generate(
        ctx: &'g GroupCtx,
        gens: &[GroupElem],
        cap: u64,
    ) -> Result<Subgroup<'g>, GroupError> {
        let gen_codes: Vec<u64> = gens.iter().map(|g| g.code).collect();
        Subgroup::generate_codes(ctx, &gen_codes, cap)
    }

    pub fn generate_codes(
        ctx: &'g GroupCtx,
        gens: &[u64],
        cap: u64,
    ) -> Result<Subgroup<'g>, GroupError> {
        let codes = match closure_codes(ctx, gens, &[], ctx.order, cap)? {
            Closure::Full => {
                ctx.enumerate(cap)?;
                ctx.elems().to_vec()
            }
            Closure::Proper(codes) => codes,
        };
        let sg = Subgroup { ctx, codes, gens: OnceLock::new(), fp: OnceLock::new() };
        let _ = sg.gens.set(gens.to_vec());
        assert_eq!(ctx.order % sg.order(), 0, "Lagrange violated by closure");
        Ok(sg)
    }

    /// Wraps an already-closed, sorted code set.
    pub fn from_sorted_codes(ctx: &'g GroupCtx, codes: Vec<u64>) -> Subgroup<'g> {
        debug_assert!(codes.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(ctx.order % (codes.len() as u64), 0, "Lagrange violated");
        Subgroup { ctx, codes, gens: OnceLock::new(), fp: OnceLock::new() }
    }

    pub fn whole_group(ctx: &'g GroupCtx) -> Subgroup<'g> {
        Subgroup::from_sorted_codes(ctx, ctx.elems().to_vec())
    }

    pub fn order(&self) -> u64 {
        self.codes.len() as u64
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn contains(&self, code: u64) -> bool {
        self.codes.binary_search(&code).is_ok()
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.ctx.order
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.codes.iter().all(|&c| other.contains(c))
    }

    /// A generating set; computed greedily if the subgroup was not built from
    /// one.
    pub fn gens(&self) -> &[u64] {
        self.gens.get_or_init(|| {
            let mut gens: Vec<u64> = Vec::new();
            let mut have: Vec<u64> = vec![self.ctx.identity().code];
            for &c in &self.codes {
                if have.binary_search(&c).is_ok() {
                    continue;
                }
                gens.push(c);
                match closure_codes(self.ctx, &gens, &have, self.ctx.order, self.order())
                    .expect("closure of a subgroup subset stays within it")
                {
                    Closure::Full => {
                        have = self.ctx.elems().to_vec();
                    }
                    Closure::Proper(codes) => have = codes,
                }
                if have.len() as u64 == self.order() {
                    break;
                }
            }
            gens
        })
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        self.fp.get_or_init(|| identify::fingerprint(self))
    }

    pub fn identify(&self) -> IsoClass {
        identify::identify(self)
    }

    pub fn intersect(&self, other: &Subgroup<'g>) -> Subgroup<'g> {
        assert!(self.ctx == other.ctx, "intersection across contexts");
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.codes.len() && j < other.codes.len() {
            match self.codes[i].cmp(&other.codes[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.codes[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Subgroup::from_sorted_codes(self.ctx, out)
    }

    /// `g H g^{-1}`.
    pub fn conjugate(&self, g: u64) -> Subgroup<'g> {
        let mut codes: Vec<u64> = self.codes.iter().map(|&h| self.ctx.conj_code(g, h)).collect();
        codes.sort_unstable();
        let sg = Subgroup::from_sorted_codes(self.ctx, codes);
        if let Some(gens) = self.gens.get() {
            let _ = sg.gens.set(gens.iter().map(|&h| self.ctx.conj_code(g, h)).collect());
        }
        sg
    }

    /// Elements of `ambient` (the whole group when `None`) normalizing this
    /// subgroup.
    pub fn normalizer(&self, ambient: Option<&Subgroup<'g>>) -> Subgroup<'g> {
        let gens = self.gens().to_vec();
        let candidates: &[u64] = match ambient {
            Some(a) => {
                assert!(self.is_subset_of(a), "normalizer ambient must contain the subgroup");
                a.codes()
            }
            None => self.ctx.elems(),
        };
        let normalizes = |g: u64| gens.iter().all(|&h| self.contains(self.ctx.conj_code(g, h)));
        let out: Vec<u64> = candidates.iter().copied().filter(|&g| normalizes(g)).collect();
        Subgroup::from_sorted_codes(self.ctx, out)
    }

    /// Conjugacy class representatives (minimal element of each class) under
    /// conjugation by this subgroup's own elements.
    pub fn class_reps(&self) -> Vec<u64> {
        class_reps_of(self.ctx, &self.codes, self.gens())
    }

    /// Normal closure of `seeds` inside this subgroup.
    pub fn normal_closure(&self, seeds: &[u64]) -> Subgroup<'g> {
        let my_gens = self.gens().to_vec();
        let mut gens: Vec<u64> = seeds.to_vec();
        loop {
            let sub = Subgroup::generate_codes(self.ctx, &gens, self.order())
                .expect("normal closure stays inside the subgroup");
            let mut grew = false;
            for &g in &gens.clone() {
                for &u in &my_gens {
                    let c = self.ctx.conj_code(u, g);
                    if !sub.contains(c) {
                        gens.push(c);
                        grew = true;
                    }
                }
            }
            if !grew {
                return sub;
            }
        }
    }
}

/// Conjugacy class representatives of `elems` under conjugation by the group
/// generated by `gens` (which must preserve the set).
pub fn class_reps_of(ctx: &GroupCtx, elems: &[u64], gens: &[u64]) -> Vec<u64> {
    let mut visited = vec![false; elems.len()];
    let mut reps = Vec::new();
    for start in 0..elems.len() {
        if visited[start] {
            continue;
        }
        reps.push(elems[start]);
        let mut queue = vec![elems[start]];
        visited[start] = true;
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = ctx.conj_code(g, x);
                let idx = elems.binary_search(&y).expect("conjugation must preserve the set");
                if !visited[idx] {
                    visited[idx] = true;
                    queue.push(y);
                }
            }
        }
    }
    reps
}

/// Classifies, for a fixed subgroup `H` of an enumerated group, which
/// elements `g` satisfy `<H, g> = G`.
///
/// Outcomes are memoized per `(H,H)` double coset: `<H,g>` is constant on
/// `HgH`, and a proper closure marks all of its own elements as failing.
pub struct ExtensionOracle<'g> {
    ctx: &'g GroupCtx,
    h_codes: Vec<u64>,
    h_gens: Vec<u64>,
    /// Order of the enclosing universe (the whole group, or a subgroup when
    /// classifying inside one).
    universe_order: u64,
    outcome: Vec<u8>, // 0 unknown, 1 generates, 2 proper
    pub closures_computed: u64,
    cap: u64,
}

pub const EXT_UNKNOWN: u8 = 0;
pub const EXT_GENERATES: u8 = 1;
pub const EXT_PROPER: u8 = 2;

impl<'g> ExtensionOracle<'g> {
    pub fn new(h: &Subgroup<'g>, universe_order: u64, cap: u64) -> ExtensionOracle<'g> {
        let ctx = h.ctx;
        let n = ctx.elems().len();
        let mut oracle = ExtensionOracle {
            ctx,
            h_codes: h.codes().to_vec(),
            h_gens: h.gens().to_vec(),
            universe_order,
            outcome: vec![EXT_UNKNOWN; n],
            closures_computed: 0,
            cap,
        };
        // Elements of H itself never extend it.
        for &c in &oracle.h_codes {
            let idx = ctx.index_of(c).expect("subgroup inside ambient");
            oracle.outcome[idx] = EXT_PROPER;
        }
        oracle
    }

    pub fn outcome_slot(&self, idx: usize) -> u8 {
        self.outcome[idx]
    }

    /// Outcome for ambient element index `idx`.
    pub fn classify(&mut self, idx: usize) -> u8 {
        if self.outcome[idx] != EXT_UNKNOWN {
            return self.outcome[idx];
        }
        let g = self.ctx.elems()[idx];
        let mut gens = self.h_gens.clone();
        gens.push(g);
        self.closures_computed += 1;
        match closure_codes(self.ctx, &gens, &self.h_codes, self.universe_order, self.cap)
            .expect("extension closure within cap")
        {
            Closure::Full => {
                self.mark_double_coset(g, EXT_GENERATES);
                self.mark_double_coset(self.ctx.inv_code(g), EXT_GENERATES);
                EXT_GENERATES
            }
            Closure::Proper(codes) => {
                for &c in &codes {
                    let i = self.ctx.index_of(c).expect("closure inside ambient");
                    self.outcome[i] = EXT_PROPER;
                }
                EXT_PROPER
            }
        }
    }

    pub fn classify_code(&mut self, code: u64) -> u8 {
        let idx = self.ctx.index_of(code).expect("element of ambient");
        self.classify(idx)
    }

    /// The proper subgroup `<H, g>`; only valid after `classify` returned
    /// `EXT_PROPER` (or for elements of `H`).
    pub fn proper_extension(&self, idx: usize) -> Subgroup<'g> {
        let g = self.ctx.elems()[idx];
        let mut gens = self.h_gens.clone();
        gens.push(g);
        match closure_codes(self.ctx, &gens, &self.h_codes, self.universe_order, self.cap)
            .expect("within cap")
        {
            Closure::Proper(codes) => {
                let sg = Subgroup::from_sorted_codes(self.ctx, codes);
                let _ = sg.gens.set(gens);
                sg
            }
            Closure::Full => panic!("proper_extension called on a generating element"),
        }
    }

    /// Marks the double coset `H g H` (and nothing else) with `tag`.
    fn mark_double_coset(&mut self, g: u64, tag: u8) {
        let idx = self.ctx.index_of(g).expect("element of ambient");
        if self.outcome[idx] == tag {
            return;
        }
        let mut stack = vec![g];
        self.outcome[idx] = tag;
        while let Some(x) = stack.pop() {
            let xm = self.ctx.decode(x);
            for &u in &self.h_gens {
                let um = self.ctx.decode(u);
                for prod in [
                    self.ctx.canonical_code(&um.mul(&self.ctx.field, &xm)),
                    self.ctx.canonical_code(&xm.mul(&self.ctx.field, &um)),
                ] {
                    let i = self.ctx.index_of(prod).expect("in ambient");
                    if self.outcome[i] != tag {
                        self.outcome[i] = tag;
                        stack.push(prod);
                    }
                }
            }
        }
    }
}

/// Greedy seed-directed ascent to a maximal subgroup containing `h`.
///
/// The returned subgroup is certified maximal: every ambient element outside
/// it has been shown (via the double-coset memo) to generate the whole group
/// together with it.
pub fn maximal_overgroup<'g>(
    h: &Subgroup<'g>,
    seed: u64,
    cap: u64,
) -> Result<Subgroup<'g>, GroupError> {
    if h.is_full() {
        return Err(GroupError::ClosureCapExceeded(0)); // caller guards; h must be proper
    }
    let ctx = h.ctx;
    ctx.enumerate(cap)?;
    let n = ctx.elems().len();
    let order = seed_order(n, seed);

    let mut current = h.clone();
    'ascend: loop {
        let mut oracle = ExtensionOracle::new(&current, ctx.order, cap);
        for &idx in &order {
            if oracle.outcome[idx] == EXT_PROPER && !current.contains(ctx.elems()[idx]) {
                // Known-proper extension from a previous closure: take it.
                let bigger = oracle.proper_extension(idx);
                if bigger.order() > current.order() {
                    current = bigger;
                    continue 'ascend;
                }
                continue;
            }
            if oracle.outcome[idx] != EXT_UNKNOWN {
                continue;
            }
            if oracle.classify(idx) == EXT_PROPER {
                let bigger = oracle.proper_extension(idx);
                if bigger.order() > current.order() {
                    current = bigger;
                    continue 'ascend;
                }
            }
        }
        // A full pass found no proper extension: every g outside is certified
        // to generate G with `current`, so it is maximal.
        return Ok(current);
    }
}

/// Deterministic seed-directed traversal order of `0..n`.
fn seed_order(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    order
}

/// All maximal subgroups of the ambient group containing `h`, by upward
/// saturation of the overgroup lattice. Intended for small groups.
pub fn all_maximal_overgroups<'g>(
    h: &Subgroup<'g>,
    cap: u64,
) -> Result<Vec<Subgroup<'g>>, GroupError> {
    let ctx = h.ctx;
    ctx.enumerate(cap)?;
    let mut seen: HashMap<Vec<u64>, bool> = HashMap::new(); // codes -> expanded
    let mut frontier: Vec<Subgroup<'g>> = vec![h.clone()];
    let mut maximal: Vec<Subgroup<'g>> = Vec::new();
    seen.insert(h.codes().to_vec(), false);

    while let Some(k) = frontier.pop() {
        let mut oracle = ExtensionOracle::new(&k, ctx.order, cap);
        let mut extended = false;
        for idx in 0..ctx.elems().len() {
            if oracle.outcome[idx] != EXT_UNKNOWN {
                continue;
            }
            if oracle.classify(idx) == EXT_PROPER {
                let bigger = oracle.proper_extension(idx);
                if bigger.order() > k.order() {
                    extended = true;
                    if !seen.contains_key(bigger.codes()) {
                        seen.insert(bigger.codes().to_vec(), false);
                        frontier.push(bigger);
                    }
                }
            }
        }
        if !extended {
            maximal.push(k);
        }
    }
    // `h` itself may have been collected when already maximal; keep distinct
    // subgroups only.
    maximal.sort_by(|a, b| a.codes().cmp(b.codes()));
    maximal.dedup_by(|a, b| a.codes() == b.codes());
    Ok(maximal)
}

/// The isomorphism types the Dickson/King classification allows for maximal
/// subgroups of `PSL(2,q)`, specialized to `q = p` or `q = p^2`.
pub fn expected_maximal_types(q: u64) -> Result<Vec<IsoClass>, GroupError> {
    let (p, is_square) = match factor_q(q) {
        Some(v) => v,
        None => return Err(GroupError::CapExceeded { order: q, cap: 0 }),
    };
    let mut out = vec![
        IsoClass::AffineFrobenius(q * (q - 1) / 2),
        IsoClass::Dihedral(q - 1),
        IsoClass::Dihedral(q + 1),
    ];
    if is_square {
        out.push(IsoClass::Psl2(p));
        out.push(IsoClass::Pgl2(p));
        if p > 3 && (p % 8 == 3 || p % 8 == 5) {
            out.push(IsoClass::Sym4);
        }
        if p % 10 == 3 || p % 10 == 7 {
            out.push(IsoClass::Alt5);
        }
    } else {
        if p % 8 == 1 || p % 8 == 7 {
            out.push(IsoClass::Sym4);
        }
        if p > 3 && (p % 8 == 3 || p % 8 == 5) {
            out.push(IsoClass::Alt4);
        }
        if p % 10 == 1 || p % 10 == 9 {
            out.push(IsoClass::Alt5);
        }
    }
    Ok(out)
}

fn factor_q(q: u64) -> Option<(u32, bool)> {
    let is_prime = |n: u64| n > 1 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
    if q % 2 == 1 && is_prime(q) {
        return Some((q as u32, false));
    }
    let r = (q as f64).sqrt().round() as u64;
    for cand in [r.saturating_sub(1), r, r + 1] {
        if cand * cand == q && cand % 2 == 1 && is_prime(cand) {
            return Some((cand as u32, true));
        }
    }
    None
}

/// The subfield subgroup of `PSL(2,p^2)`: the canonical copy of `PSL(2,p)`
/// (entries in the prime subfield, determinant 1), or its `PGL(2,p)`
/// extension when `pgl_flavor` is set (prime-subfield matrices of nonsquare
/// determinant, rescaled to determinant 1 over the extension).
pub fn subfield_embedding<'g>(
    ctx: &'g GroupCtx,
    pgl_flavor: bool,
) -> Result<Subgroup<'g>, GroupError> {
    if ctx.kind != GroupKind::Psl || ctx.field.degree() != 2 {
        return Err(GroupError::MixedContexts);
    }
    let f = &ctx.field;
    let p = f.p() as u64;
    let mut codes: Vec<u64> = Vec::new();

    // All prime-subfield rows (a,b) != 0, then the q solutions of ad - bc = d0
    // for each target determinant d0.
    let prime_elems: Vec<crate::gf::FqElem> = (0..p).map(|v| f.el(v as i64, 0)).collect();
    let dets: Vec<crate::gf::FqElem> = if pgl_flavor {
        // 1 and the smallest prime-subfield nonsquare (as an element of F_p).
        let nonsq = prime_elems
            .iter()
            .copied()
            .find(|&d| {
                !d.is_zero() && {
                    // Euler criterion within F_p.
                    let mut acc = f.one();
                    for _ in 0..(p - 1) / 2 {
                        acc = f.mul(acc, d);
                    }
                    acc != f.one()
                }
            })
            .expect("odd prime field has a nonsquare");
        vec![f.one(), nonsq]
    } else {
        vec![f.one()]
    };

    for det in dets {
        // Nonsquare determinants get rescaled by 1/sqrt(det) over F_{p^2}.
        let scale = if det == f.one() {
            f.one()
        } else {
            let root = f.sqrt(det).expect("prime-subfield element has a root in F_p^2");
            f.inv(root).expect("nonzero")
        };
        for &a in &prime_elems {
            for &b in &prime_elems {
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                for &x in &prime_elems {
                    let m = if !a.is_zero() {
                        let c = x;
                        let d = f.mul(f.add(det, f.mul(b, c)), f.inv(a).expect("nonzero"));
                        Mat2::new(a, b, c, d)
                    } else {
                        let d = x;
                        let c = f.mul(f.sub(f.mul(a, d), det), f.inv(b).expect("nonzero"));
                        Mat2::new(a, b, c, d)
                    };
                    let scaled = m.scale(f, scale);
                    debug_assert_eq!(scaled.det(f), f.one());
                    codes.push(ctx.canonical_code(&scaled));
                }
            }
        }
    }
    codes.sort_unstable();
    codes.dedup();
    let expected = if pgl_flavor { p * (p * p - 1) } else { p * (p * p - 1) / 2 };
    assert_eq!(codes.len() as u64, expected, "subfield subgroup has wrong order");
    Ok(Subgroup::from_sorted_codes(ctx, codes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use crate::psl2::{GroupCtx, GroupKind};

    const CAP: u64 = 3_000_000;

    fn psl(p: u32, d: u8) -> GroupCtx {
        GroupCtx::new(FieldCtx::new(p, d).unwrap(), GroupKind::Psl)
    }

    #[test]
    fn closure_of_unipotent_is_cyclic_p() {
        let ctx = psl(7, 1);
        let f = &ctx.field;
        let u = ctx.canonicalize(&Mat2::new(f.one(), f.one(), f.zero(), f.one())).unwrap();
        let h = Subgroup::generate(&ctx, &[u], CAP).unwrap();
        assert_eq!(h.order(), 7);
        assert_eq!(h.identify(), IsoClass::Cyclic(7));
    }

    #[test]
    fn closure_of_commuting_involutions_is_klein() {
        let ctx = psl(7, 1);
        let f = &ctx.field;
        // w = [0 -1; 1 0] and diag(i, -i)-like involution images commute.
        let w = ctx.canonicalize(&Mat2::new(f.zero(), f.minus_one(), f.one(), f.zero())).unwrap();
        // In PSL(2,7), diag(a, a^-1) with a^2 = -1 projects to an involution
        // commuting with w... use [2 0; 0 4]: 2*4 = 8 = 1, trace 6 = -1.
        let d = ctx.canonicalize(&Mat2::new(f.el(2, 0), f.zero(), f.zero(), f.el(4, 0))).unwrap();
        assert_eq!(ctx.element_order(&w), 2);
        if ctx.element_order(&d) == 2 && ctx.mul(&w, &d) == ctx.mul(&d, &w) && w != d {
            let h = Subgroup::generate(&ctx, &[w, d], CAP).unwrap();
            assert_eq!(h.order(), 4);
            assert_eq!(h.identify(), IsoClass::Klein4);
        } else {
            // Search a commuting involution pair instead.
            let elems = ctx.elems().to_vec();
            let invols: Vec<u64> = elems
                .iter()
                .copied()
                .filter(|&c| ctx.element_order(&ctx.elem_from_code(c)) == 2)
                .collect();
            let a = invols[0];
            let b = invols
                .iter()
                .copied()
                .find(|&b| b != a && ctx.mul_codes(a, b) == ctx.mul_codes(b, a))
                .expect("commuting involutions exist");
            let h = Subgroup::generate_codes(&ctx, &[a, b], CAP).unwrap();
            assert_eq!(h.identify(), IsoClass::Klein4);
        }
    }

    #[test]
    fn lagrange_holds_for_sampled_closures() {
        let ctx = psl(11, 1);
        let elems = ctx.enumerate(CAP).unwrap().to_vec();
        for i in [1usize, 17, 301, 922] {
            for j in [3usize, 59, 440] {
                let h =
                    Subgroup::generate_codes(&ctx, &[elems[i % 660], elems[j % 660]], CAP).unwrap();
                assert_eq!(ctx.order % h.order(), 0);
            }
        }
    }

    #[test]
    fn normalizer_of_whole_and_trivial() {
        let ctx = psl(7, 1);
        ctx.enumerate(CAP).unwrap();
        let g = Subgroup::whole_group(&ctx);
        assert_eq!(g.normalizer(None).order(), ctx.order);
        let trivial = Subgroup::from_sorted_codes(&ctx, vec![ctx.identity().code]);
        assert_eq!(trivial.normalizer(None).order(), ctx.order);
    }

    #[test]
    fn conjugate_preserves_fingerprint() {
        let ctx = psl(7, 1);
        let elems = ctx.enumerate(CAP).unwrap().to_vec();
        let h = Subgroup::generate_codes(&ctx, &[elems[5], elems[100]], CAP).unwrap();
        if h.is_full() {
            return;
        }
        for &g in &[elems[3], elems[77], elems[161]] {
            let hc = h.conjugate(g);
            assert_eq!(hc.fingerprint(), h.fingerprint());
        }
        assert_eq!(h.conjugate(ctx.identity().code), h);
    }

    #[test]
    fn maximal_overgroups_of_order3_cyclic_in_psl27() {
        let ctx = psl(7, 1);
        ctx.enumerate(CAP).unwrap();
        // An order-3 element lies in point stabilizers (order 21) and in
        // copies of S4 (order 24).
        let c3 = ctx
            .elems()
            .iter()
            .copied()
            .find(|&c| ctx.element_order(&ctx.elem_from_code(c)) == 3)
            .unwrap();
        let h = Subgroup::generate_codes(&ctx, &[c3], CAP).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..6 {
            let m = maximal_overgroup(&h, seed, CAP).unwrap();
            seen.insert(m.order());
            assert!(h.is_subset_of(&m));
        }
        let all = all_maximal_overgroups(&h, CAP).unwrap();
        let exhaustive: std::collections::BTreeSet<u64> =
            all.iter().map(|m| m.order()).collect();
        assert_eq!(exhaustive, [21u64, 24].into_iter().collect());
        assert!(seen.is_subset(&exhaustive));
        // Greedy results are genuinely maximal: they appear in the exhaustive
        // list.
        for seed in 0..3 {
            let m = maximal_overgroup(&h, seed, CAP).unwrap();
            assert!(all.iter().any(|x| x.codes() == m.codes()));
        }
    }

    #[test]
    fn expected_types_examples() {
        let t121 = expected_maximal_types(121).unwrap();
        assert!(t121.contains(&IsoClass::Sym4)); // 11 = 3 mod 8
        assert!(t121.contains(&IsoClass::Pgl2(11)));
        assert!(!t121.contains(&IsoClass::Alt5)); // 11 = 1 mod 10: A5 sits under the subfield copy

        let t49 = expected_maximal_types(49).unwrap();
        assert!(t49.contains(&IsoClass::Alt5)); // 7 = -3 mod 10
        assert!(t49.contains(&IsoClass::Pgl2(7)));
        assert!(!t49.contains(&IsoClass::Sym4)); // 7 = -1 mod 8

        let t7 = expected_maximal_types(7).unwrap();
        assert!(t7.contains(&IsoClass::Sym4)); // 7 = -1 mod 8
        assert!(t7.contains(&IsoClass::AffineFrobenius(21)));

        assert!(expected_maximal_types(8).is_err());
    }

    #[test]
    fn subfield_subgroups_of_psl49() {
        let ctx = psl(7, 2);
        ctx.enumerate(CAP).unwrap();
        let h = subfield_embedding(&ctx, false).unwrap();
        assert_eq!(h.order(), 168);
        assert_eq!(h.identify(), IsoClass::Psl2(7));
        let hp = subfield_embedding(&ctx, true).unwrap();
        assert_eq!(hp.order(), 336);
        assert_eq!(hp.identify(), IsoClass::Pgl2(7));
        assert!(h.is_subset_of(&hp));
    }

    #[test]
    fn identify_dihedral_in_psl211() {
        let ctx = psl(11, 1);
        ctx.enumerate(CAP).unwrap();
        // An order-5 element plus an inverting involution gives D10.
        let c5 = ctx
            .elems()
            .iter()
            .copied()
            .find(|&c| ctx.element_order(&ctx.elem_from_code(c)) == 5)
            .unwrap();
        let c5inv = ctx.inv_code(c5);
        let t = ctx
            .elems()
            .iter()
            .copied()
            .find(|&t| {
                ctx.element_order(&ctx.elem_from_code(t)) == 2 && ctx.conj_code(t, c5) == c5inv
            })
            .expect("inverting involution exists");
        let h = Subgroup::generate_codes(&ctx, &[c5, t], CAP).unwrap();
        assert_eq!(h.order(), 10);
        assert_eq!(h.identify(), IsoClass::Dihedral(10));
    }
}
