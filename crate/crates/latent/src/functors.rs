//! Restriction semifunctors and restriction transformations.

use std::sync::Arc;

use crate::category::{ArrId, FinRestCat, ObjId};
use crate::error::{Error, Result};
use crate::report::Report;

/// An object and arrow assignment between two finite restriction
/// categories. It is only a semifunctor once
/// [`verify_semifunctor`] says so.
#[derive(Debug, Clone)]
pub struct RestSemifunctor {
    pub source: Arc<FinRestCat>,
    pub target: Arc<FinRestCat>,
    pub obj_map: Vec<ObjId>,
    pub arr_map: Vec<ArrId>,
}

impl RestSemifunctor {
    pub fn new(
        source: Arc<FinRestCat>,
        target: Arc<FinRestCat>,
        obj_map: Vec<ObjId>,
        arr_map: Vec<ArrId>,
    ) -> Result<Self> {
        if obj_map.len() != source.n_objects() || arr_map.len() != source.n_arrows() {
            return Err(Error::Mismatch("maps do not cover the source".into()));
        }
        if obj_map.iter().any(|&y| y >= target.n_objects())
            || arr_map.iter().any(|&g| g >= target.n_arrows())
        {
            return Err(Error::Mismatch("maps leave the target".into()));
        }
        Ok(RestSemifunctor {
            source,
            target,
            obj_map,
            arr_map,
        })
    }

    pub fn identity(c: Arc<FinRestCat>) -> Self {
        let obj_map = c.objects().collect();
        let arr_map = c.arrows().collect();
        RestSemifunctor {
            source: c.clone(),
            target: c,
            obj_map,
            arr_map,
        }
    }

    #[inline]
    pub fn obj(&self, x: ObjId) -> ObjId {
        self.obj_map[x]
    }

    #[inline]
    pub fn arr(&self, f: ArrId) -> ArrId {
        self.arr_map[f]
    }

    /// Identities go to identities (assuming the semifunctor laws).
    pub fn preserves_identities(&self) -> bool {
        self.source
            .objects()
            .all(|x| self.arr(self.source.id(x)) == self.target.id(self.obj(x)))
    }

    /// `p(v)` is a restriction idempotent.
    pub fn is_subvertical(&self, v: ArrId) -> bool {
        self.target.is_rest_idem(self.arr(v))
    }
}

fn semifunctor_clauses(f: &RestSemifunctor, report: &mut Report) {
    let (s, t) = (&*f.source, &*f.target);
    let n = |a: ArrId| s.arr_name(a).to_string();

    let typing = s
        .arrows()
        .find(|&a| t.dom(f.arr(a)) != f.obj(s.dom(a)) || t.cod(f.arr(a)) != f.obj(s.cod(a)));
    report.record("typing", typing.map(n));
    if typing.is_some() {
        return;
    }
    let comp = s
        .arrows()
        .flat_map(|a| s.out_of(s.cod(a)).iter().map(move |&b| (a, b)))
        .find(|&(a, b)| f.arr(s.comp(a, b)) != t.comp(f.arr(a), f.arr(b)));
    report.record("composition", comp.map(|(a, b)| format!("({}, {})", n(a), n(b))));
    let rest = s.arrows().find(|&a| f.arr(s.rst(a)) != t.rst(f.arr(a)));
    report.record("restriction", rest.map(n));
}

pub fn verify_semifunctor(f: &RestSemifunctor) -> Report {
    let mut report = Report::new("restriction semifunctor");
    semifunctor_clauses(f, &mut report);
    report
}

pub fn verify_functor(f: &RestSemifunctor) -> Report {
    let mut report = Report::new("restriction functor");
    semifunctor_clauses(f, &mut report);
    let s = &*f.source;
    let bad = s
        .objects()
        .find(|&x| f.arr(s.id(x)) != f.target.id(f.obj(x)));
    report.record("identities", bad.map(|x| s.obj_name(x).to_string()));
    report
}

/// Whether two Arcs denote the same category (pointer or tables).
pub fn same_category(a: &Arc<FinRestCat>, b: &Arc<FinRestCat>) -> bool {
    Arc::ptr_eq(a, b) || a.same_tables(b)
}

/// `f` then `g`, pointwise.
pub fn compose_semifunctors(f: &RestSemifunctor, g: &RestSemifunctor) -> Result<RestSemifunctor> {
    if !same_category(&f.target, &g.source) {
        return Err(Error::Mismatch(
            "target of the first is not the source of the second".into(),
        ));
    }
    RestSemifunctor::new(
        f.source.clone(),
        g.target.clone(),
        f.obj_map.iter().map(|&y| g.obj(y)).collect(),
        f.arr_map.iter().map(|&a| g.arr(a)).collect(),
    )
}

/// A family of target arrows `alpha_X: F X -> G X`.
#[derive(Debug, Clone)]
pub struct RestTransformation {
    pub from: RestSemifunctor,
    pub to: RestSemifunctor,
    pub components: Vec<ArrId>,
}

/// Naturality and `\bar{alpha_X} = F(1_X)`.
pub fn verify_transformation(alpha: &RestTransformation) -> Report {
    let mut report = Report::new("restriction transformation");
    let (f, g) = (&alpha.from, &alpha.to);
    if !same_category(&f.source, &g.source) || !same_category(&f.target, &g.target) {
        report.fail("shape", "the two semifunctors are not parallel");
        return report;
    }
    let (s, t) = (&*f.source, &*f.target);
    if alpha.components.len() != s.n_objects() {
        report.fail("typing", "one component per object is required");
        return report;
    }
    let a = &alpha.components;
    let typing = s
        .objects()
        .find(|&x| t.dom(a[x]) != f.obj(x) || t.cod(a[x]) != g.obj(x));
    report.record("typing", typing.map(|x| s.obj_name(x).to_string()));
    if typing.is_some() {
        return report;
    }
    let nat = s
        .arrows()
        .find(|&h| t.comp(a[s.dom(h)], g.arr(h)) != t.comp(f.arr(h), a[s.cod(h)]));
    report.record("naturality", nat.map(|h| s.arr_name(h).to_string()));
    let rest = s.objects().find(|&x| t.rst(a[x]) != f.arr(s.id(x)));
    report.record("restriction", rest.map(|x| s.obj_name(x).to_string()));
    report
}

/// The pullback `W` of `p: E -> B` along `F: X -> B`, with its projections
/// `p0: W -> X` and `p1: W -> E`. Objects are the pairs `(X, E)` with
/// `F X = p E`, enumerated lexicographically.
pub fn pullback_semifunctors(
    p: &RestSemifunctor,
    f: &RestSemifunctor,
) -> Result<(Arc<FinRestCat>, RestSemifunctor, RestSemifunctor)> {
    if !same_category(&p.target, &f.target) {
        return Err(Error::Mismatch("the two semifunctors have different targets".into()));
    }
    let (e, x) = (&*p.source, &*f.source);
    let mut objs = Vec::new();
    for a in x.objects() {
        for b in e.objects() {
            if f.obj(a) == p.obj(b) {
                objs.push((a, b));
            }
        }
    }
    let mut arrs = Vec::new();
    let mut arr_index = std::collections::HashMap::new();
    for (i, &(a, b)) in objs.iter().enumerate() {
        for (j, &(a2, b2)) in objs.iter().enumerate() {
            for &g in x.hom(a, a2) {
                for &h in e.hom(b, b2) {
                    if f.arr(g) == p.arr(h) {
                        arr_index.insert((g, h), arrs.len());
                        arrs.push((g, h, i, j));
                    }
                }
            }
        }
    }
    let mut identities = Vec::with_capacity(objs.len());
    for &(a, b) in &objs {
        match arr_index.get(&(x.id(a), e.id(b))) {
            Some(&i) => identities.push(i),
            None => {
                return Err(Error::Mismatch(format!(
                    "no identity at ({}, {}): F(1) differs from p(1)",
                    x.obj_name(a),
                    e.obj_name(b)
                )))
            }
        }
    }
    let w = FinRestCat::from_fn(
        objs.iter()
            .map(|&(a, b)| format!("({},{})", x.obj_name(a), e.obj_name(b)))
            .collect(),
        arrs.iter()
            .map(|&(g, h, i, j)| (format!("({},{})", x.arr_name(g), e.arr_name(h)), i, j))
            .collect(),
        identities,
        |u, v| arr_index.get(&(x.comp(arrs[u].0, arrs[v].0), e.comp(arrs[u].1, arrs[v].1))).copied(),
        |u| arr_index.get(&(x.rst(arrs[u].0), e.rst(arrs[u].1))).copied(),
    )?;
    let w = Arc::new(w);
    let p0 = RestSemifunctor::new(
        w.clone(),
        f.source.clone(),
        objs.iter().map(|o| o.0).collect(),
        arrs.iter().map(|a| a.0).collect(),
    )?;
    let p1 = RestSemifunctor::new(
        w.clone(),
        p.source.clone(),
        objs.iter().map(|o| o.1).collect(),
        arrs.iter().map(|a| a.1).collect(),
    )?;
    Ok((w, p0, p1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_is_a_functor() {
        let c = Arc::new(fixtures::i2());
        let id = RestSemifunctor::identity(c);
        assert!(verify_functor(&id).passed());
    }

    #[test]
    fn collapsing_breaks_restriction() {
        let c = Arc::new(fixtures::i2());
        let mut arr_map: Vec<ArrId> = c.arrows().collect();
        arr_map[c.arr_by_name("a>b").unwrap()] = c.id(0);
        let g = RestSemifunctor::new(c.clone(), c.clone(), vec![0], arr_map).unwrap();
        let report = verify_semifunctor(&g);
        assert!(!report.clause("restriction").unwrap().passed);
    }

    #[test]
    fn transformation_restriction_clause() {
        let c = Arc::new(fixtures::i2());
        let id = RestSemifunctor::identity(c.clone());
        let good = RestTransformation {
            from: id.clone(),
            to: id.clone(),
            components: vec![c.id(0)],
        };
        assert!(verify_transformation(&good).passed());
        let bad = RestTransformation {
            components: vec![c.arr_by_name("0").unwrap()],
            ..good
        };
        assert!(!verify_transformation(&bad).clause("restriction").unwrap().passed);
    }
}
