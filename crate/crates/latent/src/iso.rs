//! Isomorphism search between finite restriction categories.
//!
//! Constructions produce fresh identifier spaces, so "is this the same
//! category" means "is there a bijection on objects and arrows preserving
//! dom, cod, identities, composition and restriction". The search refines
//! arrows by invariants, then backtracks, propagating every forced
//! assignment through composites and restrictions.

use std::collections::BTreeMap;

use crate::category::{ArrId, FinRestCat, ObjId};

/// A bijection on objects and arrows, indexed by the source category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub objects: Vec<ObjId>,
    pub arrows: Vec<ArrId>,
}

pub fn find_isomorphism(a: &FinRestCat, b: &FinRestCat) -> Option<Isomorphism> {
    find_isomorphism_coloured(a, b, &vec![0; a.n_arrows()], &vec![0; b.n_arrows()])
}

/// Like [`find_isomorphism`], but arrows may only map to arrows of the same
/// colour (used to match distinguished classes such as M).
pub fn find_isomorphism_coloured(
    a: &FinRestCat,
    b: &FinRestCat,
    colour_a: &[u32],
    colour_b: &[u32],
) -> Option<Isomorphism> {
    if a.n_objects() != b.n_objects() || a.n_arrows() != b.n_arrows() {
        return None;
    }
    let (class_a, class_b) = refine(a, b, colour_a, colour_b);
    let mut ca = class_a.clone();
    let mut cb = class_b.clone();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return None;
    }
    let mut s = Search {
        a,
        b,
        class_a,
        class_b,
        arr: vec![None; a.n_arrows()],
        arr_inv: vec![None; b.n_arrows()],
        obj: vec![None; a.n_objects()],
        obj_inv: vec![None; b.n_objects()],
        trail: Vec::new(),
    };
    if !s.solve() {
        return None;
    }
    let iso = Isomorphism {
        objects: s.obj.iter().map(|o| o.expect("every object is mapped")).collect(),
        arrows: s.arr.iter().map(|f| f.expect("every arrow is mapped")).collect(),
    };
    debug_assert!(is_isomorphism(a, b, &iso));
    Some(iso)
}

/// Checks that `iso` is a bijection preserving all the structure.
pub fn is_isomorphism(a: &FinRestCat, b: &FinRestCat, iso: &Isomorphism) -> bool {
    if iso.objects.len() != a.n_objects()
        || iso.arrows.len() != a.n_arrows()
        || a.n_objects() != b.n_objects()
        || a.n_arrows() != b.n_arrows()
    {
        return false;
    }
    let mut seen_o = vec![false; b.n_objects()];
    for &y in &iso.objects {
        if y >= b.n_objects() || std::mem::replace(&mut seen_o[y], true) {
            return false;
        }
    }
    let mut seen_a = vec![false; b.n_arrows()];
    for &g in &iso.arrows {
        if g >= b.n_arrows() || std::mem::replace(&mut seen_a[g], true) {
            return false;
        }
    }
    let (o, m) = (&iso.objects, &iso.arrows);
    a.objects().all(|x| m[a.id(x)] == b.id(o[x]))
        && a.arrows().all(|f| {
            b.dom(m[f]) == o[a.dom(f)]
                && b.cod(m[f]) == o[a.cod(f)]
                && m[a.rst(f)] == b.rst(m[f])
                && a.out_of(a.cod(f)).iter().all(|&g| m[a.comp(f, g)] == b.comp(m[f], m[g]))
        })
}

/// Joint colour refinement: arrows are repeatedly split by their own
/// invariants and those of their endpoints, with class ids shared between
/// the two categories so equal ids mean equal signatures.
fn refine(a: &FinRestCat, b: &FinRestCat, colour_a: &[u32], colour_b: &[u32]) -> (Vec<usize>, Vec<usize>) {
    fn base(c: &FinRestCat, colour: &[u32], f: ArrId) -> Vec<usize> {
        let below = c.hom(c.dom(f), c.cod(f)).iter().filter(|&&g| c.le(g, f)).count();
        let fixes = c.out_of(c.cod(f)).iter().filter(|&&g| c.comp(f, g) == f).count();
        vec![
            colour[f] as usize,
            c.is_identity(f) as usize,
            c.is_rest_idem(f) as usize,
            c.is_total(f) as usize,
            c.is_partial_iso(f) as usize,
            (c.dom(f) == c.cod(f)) as usize,
            below,
            fixes,
            c.hom(c.dom(f), c.cod(f)).len(),
            c.out_of(c.dom(f)).len(),
            c.into(c.cod(f)).len(),
        ]
    }
    fn intern(sigs: Vec<Vec<usize>>, split: usize) -> (Vec<usize>, Vec<usize>) {
        let mut ids = BTreeMap::new();
        for s in &sigs {
            let next = ids.len();
            ids.entry(s.clone()).or_insert(next);
        }
        // renumber in sorted order so ids do not depend on enumeration order
        let sorted: BTreeMap<Vec<usize>, usize> =
            ids.keys().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        let all: Vec<usize> = sigs.iter().map(|s| sorted[s]).collect();
        (all[..split].to_vec(), all[split..].to_vec())
    }
    let sig_a: Vec<Vec<usize>> = a.arrows().map(|f| base(a, colour_a, f)).collect();
    let sig_b: Vec<Vec<usize>> = b.arrows().map(|f| base(b, colour_b, f)).collect();
    let split = sig_a.len();
    let (mut ca, mut cb) = intern(sig_a.into_iter().chain(sig_b).collect(), split);
    for _ in 0..3 {
        let obj_sig = |c: &FinRestCat, cls: &[usize], x: ObjId| {
            let mut out: Vec<usize> = c.out_of(x).iter().map(|&f| cls[f]).collect();
            let mut inc: Vec<usize> = c.into(x).iter().map(|&f| cls[f]).collect();
            out.sort_unstable();
            inc.sort_unstable();
            (out, inc)
        };
        let arr_sig = |c: &FinRestCat, cls: &[usize], f: ArrId| {
            let (o1, i1) = obj_sig(c, cls, c.dom(f));
            let (o2, i2) = obj_sig(c, cls, c.cod(f));
            let mut s = vec![cls[f], cls[c.rst(f)], usize::MAX];
            for part in [o1, i1, o2, i2] {
                s.extend(part);
                s.push(usize::MAX);
            }
            s
        };
        let sa: Vec<Vec<usize>> = a.arrows().map(|f| arr_sig(a, &ca, f)).collect();
        let sb: Vec<Vec<usize>> = b.arrows().map(|f| arr_sig(b, &cb, f)).collect();
        let (na, nb) = intern(sa.into_iter().chain(sb).collect(), split);
        let same = count_classes(&na, &nb) == count_classes(&ca, &cb);
        ca = na;
        cb = nb;
        if same {
            break;
        }
    }
    (ca, cb)
}

fn count_classes(a: &[usize], b: &[usize]) -> usize {
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

enum Undo {
    Arr(ArrId, ArrId),
    Obj(ObjId, ObjId),
}

struct Search<'a> {
    a: &'a FinRestCat,
    b: &'a FinRestCat,
    class_a: Vec<usize>,
    class_b: Vec<usize>,
    arr: Vec<Option<ArrId>>,
    arr_inv: Vec<Option<ArrId>>,
    obj: Vec<Option<ObjId>>,
    obj_inv: Vec<Option<ObjId>>,
    trail: Vec<Undo>,
}

impl Search<'_> {
    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail is nonempty") {
                Undo::Arr(f, g) => {
                    self.arr[f] = None;
                    self.arr_inv[g] = None;
                }
                Undo::Obj(x, y) => {
                    self.obj[x] = None;
                    self.obj_inv[y] = None;
                }
            }
        }
    }

    fn set_obj(&mut self, x: ObjId, y: ObjId, queue: &mut Vec<(ArrId, ArrId)>) -> bool {
        match (self.obj[x], self.obj_inv[y]) {
            (Some(y2), _) => y2 == y,
            (None, Some(_)) => false,
            (None, None) => {
                self.obj[x] = Some(y);
                self.obj_inv[y] = Some(x);
                self.trail.push(Undo::Obj(x, y));
                queue.push((self.a.id(x), self.b.id(y)));
                true
            }
        }
    }

    /// Assigns `f -> g` and everything it forces; false on contradiction.
    fn assign(&mut self, f: ArrId, g: ArrId) -> bool {
        let mut queue = vec![(f, g)];
        while let Some((f, g)) = queue.pop() {
            match (self.arr[f], self.arr_inv[g]) {
                (Some(g2), _) => {
                    if g2 != g {
                        return false;
                    }
                    continue;
                }
                (None, Some(_)) => return false,
                (None, None) => {}
            }
            if self.class_a[f] != self.class_b[g] {
                return false;
            }
            self.arr[f] = Some(g);
            self.arr_inv[g] = Some(f);
            self.trail.push(Undo::Arr(f, g));
            let (a, b) = (self.a, self.b);
            if !self.set_obj(a.dom(f), b.dom(g), &mut queue)
                || !self.set_obj(a.cod(f), b.cod(g), &mut queue)
            {
                return false;
            }
            queue.push((a.rst(f), b.rst(g)));
            for &h in a.out_of(a.cod(f)) {
                if let Some(h2) = self.arr[h] {
                    queue.push((a.comp(f, h), b.comp(g, h2)));
                }
            }
            for &h in a.into(a.dom(f)) {
                if let Some(h2) = self.arr[h] {
                    queue.push((a.comp(h, f), b.comp(h2, g)));
                }
            }
        }
        true
    }

    fn candidates(&self, f: ArrId) -> Vec<ArrId> {
        let (a, b) = (self.a, self.b);
        let ok_obj = |x: ObjId, y: ObjId| match self.obj[x] {
            Some(y2) => y2 == y,
            None => self.obj_inv[y].is_none(),
        };
        b.arrows()
            .filter(|&g| {
                self.arr_inv[g].is_none()
                    && self.class_b[g] == self.class_a[f]
                    && ok_obj(a.dom(f), b.dom(g))
                    && ok_obj(a.cod(f), b.cod(g))
            })
            .collect()
    }

    fn solve(&mut self) -> bool {
        let mut best: Option<(ArrId, Vec<ArrId>)> = None;
        for f in self.a.arrows().filter(|&f| self.arr[f].is_none()) {
            let cands = self.candidates(f);
            if cands.is_empty() {
                return false;
            }
            if best.as_ref().is_none_or(|(_, c)| cands.len() < c.len()) {
                let done = cands.len() == 1;
                best = Some((f, cands));
                if done {
                    break;
                }
            }
        }
        let Some((f, cands)) = best else {
            return true;
        };
        for g in cands {
            let mark = self.trail.len();
            if self.assign(f, g) && self.solve() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn a_category_is_isomorphic_to_itself() {
        for c in [fixtures::triv2(), fixtures::i2(), fixtures::par2()] {
            let iso = find_isomorphism(&c, &c).unwrap();
            assert!(is_isomorphism(&c, &c, &iso));
        }
    }

    #[test]
    fn restriction_matters() {
        let c = fixtures::i2();
        assert!(find_isomorphism(&c, &c.with_trivial_restriction()).is_none());
    }

    #[test]
    fn renamed_copy_is_found() {
        let c = fixtures::par1();
        let arrs: Vec<ArrId> = c.arrows().rev().collect();
        let objs: Vec<ObjId> = c.objects().rev().collect();
        let (d, _, _) = c.subcategory(&objs, &arrs).unwrap();
        assert!(find_isomorphism(&c, &d).is_some());
    }
}
