//! Structural recognition of the subgroups that occur in this problem
//! domain.
//!
//! The decision table goes: cyclic, Klein four, dihedral (cyclic index-2
//! subgroup inverted by an outside involution), then the exceptional groups
//! A4/S4/A5 by element-order multiset, then PSL/PGL of prime degree by order
//! formula plus simplicity/completeness probes, then split Frobenius groups
//! with a normal full Sylow p-subgroup and cyclic complement. Anything else
//! is `Other`. Within that zoo the probes separate every pair; the multiset
//! checks alone would already separate {K4, S3, D2k, A4, S4, A5}.

use super::Subgroup;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsoClass {
    Cyclic(u64),
    Dihedral(u64),
    Klein4,
    Alt4,
    Sym4,
    Alt5,
    Psl2(u32),
    Pgl2(u32),
    AffineFrobenius(u64),
    Other,
}

impl std::fmt::Display for IsoClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IsoClass::Cyclic(n) => write!(f, "C{n}"),
            IsoClass::Dihedral(n) => write!(f, "D{n}"),
            IsoClass::Klein4 => write!(f, "K4"),
            IsoClass::Alt4 => write!(f, "A4"),
            IsoClass::Sym4 => write!(f, "S4"),
            IsoClass::Alt5 => write!(f, "A5"),
            IsoClass::Psl2(p) => write!(f, "PSL(2,{p})"),
            IsoClass::Pgl2(p) => write!(f, "PGL(2,{p})"),
            IsoClass::AffineFrobenius(n) => write!(f, "AffineFrobenius({n})"),
            IsoClass::Other => write!(f, "Other"),
        }
    }
}

/// Structural invariants of a subgroup: order, abelianness, the element-order
/// multiset and the center size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: u64,
    pub abelian: bool,
    /// (element order, multiplicity), ascending.
    pub order_multiset: Vec<(u64, u64)>,
    pub center: u64,
}

pub(super) fn fingerprint(h: &Subgroup) -> Fingerprint {
    let ctx = h.ctx;
    let mut multiset: BTreeMap<u64, u64> = BTreeMap::new();
    for &c in h.codes() {
        let ord = ctx.element_order(&ctx.elem_from_code(c));
        *multiset.entry(ord).or_insert(0) += 1;
    }
    let gens = h.gens();
    let abelian = gens
        .iter()
        .all(|&a| gens.iter().all(|&b| ctx.mul_codes(a, b) == ctx.mul_codes(b, a)));
    let center = h
        .codes()
        .iter()
        .filter(|&&z| gens.iter().all(|&g| ctx.mul_codes(z, g) == ctx.mul_codes(g, z)))
        .count() as u64;
    Fingerprint {
        order: h.order(),
        abelian,
        order_multiset: multiset.into_iter().collect(),
        center,
    }
}

fn multiset_max(fp: &Fingerprint) -> u64 {
    fp.order_multiset.last().map(|&(o, _)| o).unwrap_or(1)
}

fn count_of_order(fp: &Fingerprint, ord: u64) -> u64 {
    fp.order_multiset.iter().find(|&&(o, _)| o == ord).map(|&(_, c)| c).unwrap_or(0)
}

pub(super) fn identify(h: &Subgroup) -> IsoClass {
    let ctx = h.ctx;
    let n = h.order();
    let fp = h.fingerprint().clone();

    if multiset_max(&fp) == n {
        return IsoClass::Cyclic(n);
    }
    if n == 4 {
        // Noncyclic of order 4.
        return IsoClass::Klein4;
    }
    if n % 2 == 0 && n >= 6 && is_dihedral(h, &fp) {
        return IsoClass::Dihedral(n);
    }
    if n == 12 && fp.order_multiset == vec![(1, 1), (2, 3), (3, 8)] {
        return IsoClass::Alt4;
    }
    if n == 24 && fp.order_multiset == vec![(1, 1), (2, 9), (3, 8), (4, 6)] {
        return IsoClass::Sym4;
    }
    if n == 60 && fp.order_multiset == vec![(1, 1), (2, 15), (3, 20), (5, 24)] {
        return IsoClass::Alt5;
    }
    if let Some(r) = order_is_psl2(n) {
        if !fp.abelian && fp.center == 1 && is_simple(h) {
            return IsoClass::Psl2(r);
        }
    }
    if let Some(r) = order_is_pgl2(n) {
        if is_pgl2_like(h, &fp) {
            return IsoClass::Pgl2(r);
        }
    }
    let p = ctx.field.p() as u64;
    if n % p == 0 && is_affine_frobenius(h, &fp, p) {
        return IsoClass::AffineFrobenius(n);
    }
    IsoClass::Other
}

/// Dihedral of order n: a cyclic subgroup of order n/2 inverted by an
/// involution outside it.
fn is_dihedral(h: &Subgroup, fp: &Fingerprint) -> bool {
    let ctx = h.ctx;
    let n = h.order();
    let half = n / 2;
    if count_of_order(fp, half) == 0 {
        return false;
    }
    let x = h
        .codes()
        .iter()
        .copied()
        .find(|&c| ctx.element_order(&ctx.elem_from_code(c)) == half)
        .expect("multiset said an element of order n/2 exists");
    // The cyclic subgroup <x>.
    let mut cyc = Vec::with_capacity(half as usize);
    let mut acc = ctx.identity().code;
    for _ in 0..half {
        cyc.push(acc);
        acc = ctx.mul_codes(acc, x);
    }
    cyc.sort_unstable();
    let xinv = ctx.inv_code(x);
    h.codes().iter().any(|&t| {
        cyc.binary_search(&t).is_err()
            && ctx.element_order(&ctx.elem_from_code(t)) == 2
            && ctx.conj_code(t, x) == xinv
    })
}

fn order_is_psl2(n: u64) -> Option<u32> {
    // r(r^2-1)/2 = n for an odd prime r >= 7 (r = 5 gives 60, reported as A5).
    let mut r = 7u64;
    while r * (r * r - 1) / 2 <= n {
        if is_prime_u64(r) && r * (r * r - 1) / 2 == n {
            return Some(r as u32);
        }
        r += 2;
    }
    None
}

fn order_is_pgl2(n: u64) -> Option<u32> {
    let mut r = 3u64;
    while r * (r * r - 1) <= n {
        if is_prime_u64(r) && r * (r * r - 1) == n {
            return Some(r as u32);
        }
        r += 2;
    }
    None
}

fn is_prime_u64(n: u64) -> bool {
    n > 1 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// No nontrivial proper normal subgroup: the normal closure of every
/// conjugacy class representative is the whole subgroup.
fn is_simple(h: &Subgroup) -> bool {
    let id = h.ctx.identity().code;
    h.class_reps()
        .iter()
        .filter(|&&r| r != id)
        .all(|&r| h.normal_closure(&[r]).order() == h.order())
}

/// Complete-group probe for PGL(2,r): trivial center, derived subgroup of
/// index 2, derived subgroup simple.
fn is_pgl2_like(h: &Subgroup, fp: &Fingerprint) -> bool {
    if fp.center != 1 || fp.abelian {
        return false;
    }
    let ctx = h.ctx;
    let gens = h.gens();
    let mut comms = Vec::new();
    for &a in gens {
        for &b in gens {
            let ab = ctx.mul_codes(a, b);
            let ba = ctx.mul_codes(b, a);
            let comm = ctx.mul_codes(ab, ctx.inv_code(ba));
            if comm != ctx.identity().code {
                comms.push(comm);
            }
        }
    }
    if comms.is_empty() {
        return false;
    }
    let derived = h.normal_closure(&comms);
    derived.order() * 2 == h.order() && is_simple(&derived)
}

/// Split Frobenius-type group: the elements of p-power order form a normal
/// full Sylow p-subgroup with a cyclic complement.
fn is_affine_frobenius(h: &Subgroup, fp: &Fingerprint, p: u64) -> bool {
    let n = h.order();
    let mut p_part = 1u64;
    let mut m = n;
    while m % p == 0 {
        p_part *= p;
        m /= p;
    }
    if p_part == 1 || m == 1 {
        return false;
    }
    let ctx = h.ctx;
    let is_p_power = |ord: u64| {
        let mut o = ord;
        while o % p == 0 {
            o /= p;
        }
        o == 1
    };
    let sylow: Vec<u64> = h
        .codes()
        .iter()
        .copied()
        .filter(|&c| is_p_power(ctx.element_order(&ctx.elem_from_code(c))))
        .collect();
    if sylow.len() as u64 != p_part {
        return false;
    }
    // Closed under products (the codes are sorted by construction).
    for &a in &sylow {
        for &b in &sylow {
            if sylow.binary_search(&ctx.mul_codes(a, b)).is_err() {
                return false;
            }
        }
    }
    // Normal in h.
    for &g in h.gens() {
        for &s in &sylow {
            if sylow.binary_search(&ctx.conj_code(g, s)).is_err() {
                return false;
            }
        }
    }
    // Cyclic complement of order m.
    count_of_order(fp, m) > 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use crate::psl2::{GroupCtx, GroupKind, Mat2};

    const CAP: u64 = 3_000_000;

    #[test]
    fn identify_q8_falls_through_to_other() {
        let f = FieldCtx::new(3, 1).unwrap();
        let ctx = GroupCtx::new(f, GroupKind::Sl);
        ctx.enumerate(CAP).unwrap();
        let i = ctx.canonicalize(&Mat2::new(f.zero(), f.minus_one(), f.one(), f.zero())).unwrap();
        let j = ctx.canonicalize(&Mat2::new(f.one(), f.one(), f.one(), f.minus_one())).unwrap();
        let q8 = Subgroup::generate(&ctx, &[i, j], CAP).unwrap();
        assert_eq!(q8.order(), 8);
        // Q8 has a unique involution, so it fails the dihedral probe.
        assert_eq!(q8.identify(), IsoClass::Other);
        let fp = q8.fingerprint();
        assert_eq!(fp.order_multiset, vec![(1, 1), (2, 1), (4, 6)]);
        assert_eq!(fp.center, 2);
    }

    #[test]
    fn identify_s4_and_point_stabilizer_in_psl27() {
        let f = FieldCtx::new(7, 1).unwrap();
        let ctx = GroupCtx::new(f, GroupKind::Psl);
        ctx.enumerate(CAP).unwrap();
        // Scan pairs until both a 24-element and a 21-element subgroup appear.
        let elems = ctx.elems().to_vec();
        let mut found_s4 = false;
        let mut found_stab = false;
        'outer: for (si, &a) in elems.iter().enumerate().step_by(3) {
            for &b in elems.iter().skip(si % 7 + 1).step_by(5) {
                let h = Subgroup::generate_codes(&ctx, &[a, b], CAP).unwrap();
                match h.order() {
                    24 => {
                        assert_eq!(h.identify(), IsoClass::Sym4);
                        found_s4 = true;
                    }
                    21 => {
                        assert_eq!(h.identify(), IsoClass::AffineFrobenius(21));
                        found_stab = true;
                    }
                    _ => {}
                }
                if found_s4 && found_stab {
                    break 'outer;
                }
            }
        }
        assert!(found_s4 && found_stab);
    }

    #[test]
    fn identify_whole_psl27_as_simple() {
        let f = FieldCtx::new(7, 1).unwrap();
        let ctx = GroupCtx::new(f, GroupKind::Psl);
        ctx.enumerate(CAP).unwrap();
        let g = Subgroup::whole_group(&ctx);
        assert_eq!(g.identify(), IsoClass::Psl2(7));
    }

    #[test]
    fn identify_cyclic_and_klein() {
        let f = FieldCtx::new(7, 1).unwrap();
        let ctx = GroupCtx::new(f, GroupKind::Psl);
        ctx.enumerate(CAP).unwrap();
        let u = ctx.canonicalize(&Mat2::new(f.one(), f.one(), f.zero(), f.one())).unwrap();
        let h = Subgroup::generate(&ctx, &[u], CAP).unwrap();
        assert_eq!(h.identify(), IsoClass::Cyclic(7));
    }
}
