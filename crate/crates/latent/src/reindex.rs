//! Strands, substitution semifunctors and the pseudo-functor data of a
//! cloven latent fibration.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::category::{ArrId, FinRestCat, ObjId};
use crate::error::{Error, Result};
use crate::fibration::{mediating_partial_iso, unique_lift, FibrationReport};
use crate::functors::{
    compose_semifunctors, verify_semifunctor, verify_transformation, RestSemifunctor,
    RestTransformation,
};
use crate::report::Report;

/// The strand of a base object `B`: objects over `B` and the arrows sent
/// into `O(B)`, with the maps back into `E`.
#[derive(Debug, Clone)]
pub struct Strand {
    pub base: ObjId,
    pub cat: Arc<FinRestCat>,
    /// New object id to object of `E`.
    pub objects: Vec<ObjId>,
    /// New arrow id to arrow of `E`.
    pub arrows: Vec<ArrId>,
    obj_index: HashMap<ObjId, ObjId>,
    arr_index: HashMap<ArrId, ArrId>,
}

impl Strand {
    pub fn obj(&self, x: ObjId) -> Option<ObjId> {
        self.obj_index.get(&x).copied()
    }

    pub fn arr(&self, f: ArrId) -> Option<ArrId> {
        self.arr_index.get(&f).copied()
    }
}

pub fn strand(p: &RestSemifunctor, b: ObjId) -> Result<Strand> {
    let (e, base) = (&*p.source, &*p.target);
    let objs: Vec<ObjId> = e.objects().filter(|&x| p.obj(x) == b).collect();
    let arrs: Vec<ArrId> = e
        .arrows()
        .filter(|&f| p.obj(e.dom(f)) == b && p.obj(e.cod(f)) == b && base.is_rest_idem(p.arr(f)))
        .collect();
    let (cat, objects, arrows) = e.subcategory(&objs, &arrs)?;
    let obj_index = objects.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let arr_index = arrows.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    Ok(Strand {
        base: b,
        cat: Arc::new(cat),
        objects,
        arrows,
        obj_index,
        arr_index,
    })
}

/// Substitution along base arrows, computed from the cleavage of a
/// certified fibration.
#[derive(Debug)]
pub struct Reindexing<'a> {
    fib: &'a FibrationReport,
    strands: BTreeMap<ObjId, Strand>,
}

impl<'a> Reindexing<'a> {
    pub fn new(fib: &'a FibrationReport) -> Result<Self> {
        let mut strands = BTreeMap::new();
        for b in fib.base().objects() {
            strands.insert(b, strand(&fib.p, b)?);
        }
        Ok(Reindexing { fib, strands })
    }

    pub fn strand(&self, b: ObjId) -> &Strand {
        &self.strands[&b]
    }

    /// The cleavage arrow `u*_X: u*X -> X`.
    pub fn cleave(&self, x: ObjId, u: ArrId) -> Result<ArrId> {
        self.fib.lift(x, u)
    }

    /// `u*X` as an object of `E`.
    pub fn sub_obj(&self, u: ArrId, x: ObjId) -> Result<ObjId> {
        Ok(self.fib.total().dom(self.cleave(x, u)?))
    }

    /// `u*(f)` as an arrow of `E`, for `f` in the strand of `cod u`.
    pub fn sub_arr(&self, u: ArrId, f: ArrId) -> Result<ArrId> {
        let (e, b) = (self.fib.total(), self.fib.base());
        let (cx, cy) = (self.cleave(e.dom(f), u)?, self.cleave(e.cod(f), u)?);
        let h = b.rst(b.comp(u, self.fib.p.arr(f)));
        unique_lift(&self.fib.p, cy, e.comp(cx, f), h).ok_or_else(|| {
            Error::NotCloven(format!(
                "`{}` has no unique lift against `{}`",
                e.arr_name(cy),
                e.arr_name(f)
            ))
        })
    }

    /// Whether every object over `cod u` has a cleavage arrow over `u`.
    pub fn is_defined(&self, u: ArrId) -> bool {
        let b = self.fib.base();
        self.strand(b.cod(u))
            .objects
            .iter()
            .all(|&x| self.fib.cleavage.contains_key(&(x, u)))
    }

    /// `u*: strand(cod u) -> strand(dom u)`.
    pub fn substitution(&self, u: ArrId) -> Result<RestSemifunctor> {
        let b = self.fib.base();
        let (src, dst) = (self.strand(b.cod(u)), self.strand(b.dom(u)));
        let e = self.fib.total();
        let mut obj_map = Vec::with_capacity(src.objects.len());
        for &x in &src.objects {
            let y = self.sub_obj(u, x)?;
            obj_map.push(dst.obj(y).ok_or_else(|| {
                Error::NotCloven(format!("`{}` is not in the strand", e.obj_name(y)))
            })?);
        }
        let mut arr_map = Vec::with_capacity(src.arrows.len());
        for &f in &src.arrows {
            let k = self.sub_arr(u, f)?;
            arr_map.push(dst.arr(k).ok_or_else(|| {
                Error::NotCloven(format!("`{}` is not subvertical", e.arr_name(k)))
            })?);
        }
        RestSemifunctor::new(src.cat.clone(), dst.cat.clone(), obj_map, arr_map)
    }

    /// `(u <= v)*_X` as an arrow of `E`: the lift of `\bar u` through
    /// `v*_X` against `u*_X`.
    pub fn leq_component(&self, u: ArrId, v: ArrId, x: ObjId) -> Result<ArrId> {
        let b = self.fib.base();
        if !b.le(u, v) {
            return Err(Error::Mismatch(format!(
                "`{}` is not below `{}`",
                b.arr_name(u),
                b.arr_name(v)
            )));
        }
        let (cu, cv) = (self.cleave(x, u)?, self.cleave(x, v)?);
        unique_lift(&self.fib.p, cv, cu, b.rst(u)).ok_or_else(|| {
            Error::NotCloven(format!("no lift of `{}` through `{}`", b.arr_name(u), b.arr_name(v)))
        })
    }

    /// The restriction transformation `(u <= v)*: u* -> v*`.
    pub fn leq_transformation(&self, u: ArrId, v: ArrId) -> Result<RestTransformation> {
        let b = self.fib.base();
        let (src, dst) = (self.strand(b.cod(u)), self.strand(b.dom(u)));
        let mut components = Vec::with_capacity(src.objects.len());
        for &x in &src.objects {
            components.push(self.in_strand(dst, self.leq_component(u, v, x)?)?);
        }
        Ok(RestTransformation {
            from: self.substitution(u)?,
            to: self.substitution(v)?,
            components,
        })
    }

    fn in_strand(&self, s: &Strand, k: ArrId) -> Result<ArrId> {
        s.arr(k).ok_or_else(|| {
            Error::NotCloven(format!("`{}` is not subvertical", self.fib.total().arr_name(k)))
        })
    }

    fn mediate(&self, f: ArrId, g: ArrId) -> Result<ArrId> {
        mediating_partial_iso(&self.fib.p, f, g).ok_or_else(|| {
            let e = self.fib.total();
            Error::NotCloven(format!(
                "no mediating partial isomorphism between `{}` and `{}`",
                e.arr_name(f),
                e.arr_name(g)
            ))
        })
    }

    /// `(alpha_B)_X: X -> 1_B^* X`.
    pub fn unit_component(&self, x: ObjId) -> Result<ArrId> {
        let e = self.fib.total();
        let one = self.fib.base().id(self.fib.p.obj(x));
        self.mediate(e.id(x), self.cleave(x, one)?)
    }

    /// The unit `alpha_B: 1 -> 1_B^*` on the strand of `B`.
    pub fn unit(&self, b: ObjId) -> Result<RestTransformation> {
        let s = self.strand(b);
        let mut components = Vec::with_capacity(s.objects.len());
        for &x in &s.objects {
            components.push(self.in_strand(s, self.unit_component(x)?)?);
        }
        Ok(RestTransformation {
            from: RestSemifunctor::identity(s.cat.clone()),
            to: self.substitution(self.fib.base().id(b))?,
            components,
        })
    }

    /// `(alpha_{f,g})_X: f*g*X -> (fg)*X` for `f: A -> B`, `g: B -> C`.
    pub fn compositor_component(&self, f: ArrId, g: ArrId, x: ObjId) -> Result<ArrId> {
        let (e, b) = (self.fib.total(), self.fib.base());
        let gx = self.cleave(x, g)?;
        let fgx = self.cleave(e.dom(gx), f)?;
        self.mediate(e.comp(fgx, gx), self.cleave(x, b.comp(f, g))?)
    }

    /// The compositor `alpha_{f,g}: g*;f* -> (fg)*`.
    pub fn compositor(&self, f: ArrId, g: ArrId) -> Result<RestTransformation> {
        let b = self.fib.base();
        let (src, dst) = (self.strand(b.cod(g)), self.strand(b.dom(f)));
        let mut components = Vec::with_capacity(src.objects.len());
        for &x in &src.objects {
            components.push(self.in_strand(dst, self.compositor_component(f, g, x)?)?);
        }
        Ok(RestTransformation {
            from: compose_semifunctors(&self.substitution(g)?, &self.substitution(f)?)?,
            to: self.substitution(b.comp(f, g))?,
            components,
        })
    }

    /// Checks the substitution semifunctors, the 2-cells, and the unit,
    /// associativity and vertical composition laws wherever the data is
    /// defined. The interchange square is evaluated separately and only
    /// reported.
    pub fn check_coherence(&self) -> Result<Coherence> {
        let (e, b) = (self.fib.total(), self.fib.base());
        let mut report = Report::new("pseudo-functor");
        let defined: Vec<ArrId> = b.arrows().filter(|&u| self.is_defined(u)).collect();
        let is_def = |u: ArrId| defined.binary_search(&u).is_ok();
        let n = |u: ArrId| b.arr_name(u).to_string();

        let mut semi = None;
        for &u in &defined {
            if !verify_semifunctor(&self.substitution(u)?).passed() {
                semi.get_or_insert(n(u));
            }
        }
        report.record("substitution", semi);

        let mut cells = None;
        let mut vertical = None;
        for &u in &defined {
            for &v in &defined {
                if b.dom(u) != b.dom(v) || b.cod(u) != b.cod(v) || !b.le(u, v) {
                    continue;
                }
                if !verify_transformation(&self.leq_transformation(u, v)?).passed() {
                    cells.get_or_insert(format!("{} <= {}", n(u), n(v)));
                }
                for &w in &defined {
                    if b.dom(w) != b.dom(v) || b.cod(w) != b.cod(v) || !b.le(v, w) {
                        continue;
                    }
                    for &x in &self.strand(b.cod(u)).objects {
                        let lhs =
                            e.comp(self.leq_component(u, v, x)?, self.leq_component(v, w, x)?);
                        if lhs != self.leq_component(u, w, x)? {
                            vertical.get_or_insert(format!("{} <= {} <= {}", n(u), n(v), n(w)));
                        }
                    }
                }
            }
        }
        report.record("leq", cells);
        report.record("vertical", vertical);

        let mut units = None;
        let mut comps = None;
        let (mut left, mut right) = (None, None);
        for &f in &defined {
            let (a, bb) = (b.dom(f), b.cod(f));
            let (one_a, one_b) = (b.id(a), b.id(bb));
            if is_def(one_b) && !verify_transformation(&self.unit(bb)?).passed() {
                units.get_or_insert(b.obj_name(bb).to_string());
            }
            for &x in &self.strand(bb).objects {
                let f1x = self.sub_arr(f, e.id(x))?;
                if is_def(one_a) {
                    let fx = self.sub_obj(f, x)?;
                    let lhs = e.comp(
                        self.unit_component(fx)?,
                        self.compositor_component(one_a, f, x)?,
                    );
                    if lhs != f1x {
                        left.get_or_insert(format!("{} at {}", n(f), e.obj_name(x)));
                    }
                }
                if is_def(one_b) && is_def(b.comp(f, one_b)) {
                    let lhs = e.comp(
                        self.sub_arr(f, self.unit_component(x)?)?,
                        self.compositor_component(f, one_b, x)?,
                    );
                    if lhs != f1x {
                        right.get_or_insert(format!("{} at {}", n(f), e.obj_name(x)));
                    }
                }
            }
        }
        report.record("unit", units);
        report.record("unit.left", left);
        report.record("unit.right", right);

        let mut assoc = None;
        let mut horizontal = Vec::new();
        for &f in &defined {
            for &g in b.out_of(b.cod(f)) {
                if !is_def(g) || !is_def(b.comp(f, g)) {
                    continue;
                }
                if !verify_transformation(&self.compositor(f, g)?).passed() {
                    comps.get_or_insert(format!("{}, {}", n(f), n(g)));
                }
                for &h in b.out_of(b.cod(g)) {
                    let (gh, fg) = (b.comp(g, h), b.comp(f, g));
                    if ![h, gh, fg, b.comp(fg, h)].iter().all(|&u| is_def(u)) {
                        continue;
                    }
                    for &x in &self.strand(b.cod(h)).objects {
                        let hx = self.sub_obj(h, x)?;
                        let lhs = e.comp(
                            self.sub_arr(f, self.compositor_component(g, h, x)?)?,
                            self.compositor_component(f, gh, x)?,
                        );
                        let rhs = e.comp(
                            self.compositor_component(f, g, hx)?,
                            self.compositor_component(fg, h, x)?,
                        );
                        if lhs != rhs {
                            assoc.get_or_insert(format!(
                                "{}, {}, {} at {}",
                                n(f),
                                n(g),
                                n(h),
                                e.obj_name(x)
                            ));
                        }
                    }
                }
                horizontal.extend(self.interchange(f, g, &is_def)?);
            }
        }
        report.record("compositor", comps);
        report.record("associativity", assoc);
        Ok(Coherence { report, horizontal })
    }

    /// For `f <= k` and `g <= h`, compares `alpha_{f,g}; (fg <= kh)*` with
    /// `f*((g <= h)*); (f <= k)*_{h*}; alpha_{k,h}` at each object.
    fn interchange(&self, f: ArrId, g: ArrId, is_def: &dyn Fn(ArrId) -> bool) -> Result<Vec<String>> {
        let (e, b) = (self.fib.total(), self.fib.base());
        let mut out = Vec::new();
        let (fg, a, bb, c) = (b.comp(f, g), b.dom(f), b.cod(f), b.cod(g));
        for &k in b.hom(a, bb) {
            for &h in b.hom(bb, c) {
                let kh = b.comp(k, h);
                if (k, h) == (f, g)
                    || !b.le(f, k)
                    || !b.le(g, h)
                    || ![k, h, kh].iter().all(|&u| is_def(u))
                {
                    continue;
                }
                for &x in &self.strand(c).objects {
                    let lhs = e.comp(
                        self.compositor_component(f, g, x)?,
                        self.leq_component(fg, kh, x)?,
                    );
                    let rhs = e.comp_all(&[
                        self.sub_arr(f, self.leq_component(g, h, x)?)?,
                        self.leq_component(f, k, self.sub_obj(h, x)?)?,
                        self.compositor_component(k, h, x)?,
                    ]);
                    if lhs != rhs {
                        out.push(format!(
                            "({} <= {}) * ({} <= {}) at {}: {} vs {}",
                            b.arr_name(f),
                            b.arr_name(k),
                            b.arr_name(g),
                            b.arr_name(h),
                            e.obj_name(x),
                            e.arr_name(lhs),
                            e.arr_name(rhs)
                        ));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The coherence report plus the interchange discrepancies, which are
/// informational only.
#[derive(Debug, Clone)]
pub struct Coherence {
    pub report: Report,
    pub horizontal: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::certify_latent_fibration;
    use crate::fixtures;
    use crate::functors::verify_functor;

    #[test]
    fn identity_fibration_strands_are_endos_below_one() {
        let c = Arc::new(fixtures::i2());
        let fib = certify_latent_fibration(&RestSemifunctor::identity(c.clone()));
        let s = strand(&fib.p, 0).unwrap();
        assert_eq!(s.cat.n_arrows(), c.idempotents(0).len());
    }

    #[test]
    fn substitution_along_total_maps_is_a_functor() {
        let c = Arc::new(fixtures::par2());
        let fib = certify_latent_fibration(&RestSemifunctor::identity(c.clone()));
        let r = Reindexing::new(&fib).unwrap();
        for u in c.arrows().filter(|&u| c.is_total(u)) {
            assert!(verify_functor(&r.substitution(u).unwrap()).passed());
        }
        let coh = r.check_coherence().unwrap();
        assert!(coh.report.passed(), "{:?}", coh.report.failures().collect::<Vec<_>>());
    }
}
