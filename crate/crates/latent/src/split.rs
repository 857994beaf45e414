//! Splitting restriction idempotents.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::{ArrId, FinRestCat, ObjId};
use crate::functors::RestSemifunctor;

/// `Split_r(C)` with its bookkeeping: each object is a pair `(X, e)` and
/// each arrow an arrow of `C` between such pairs.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub cat: Arc<FinRestCat>,
    pub objects: Vec<(ObjId, ArrId)>,
    /// The forgetful semifunctor `U: Split_r(C) -> C`.
    pub forget: RestSemifunctor,
}

impl Splitting {
    /// The object `(x, e)`.
    pub fn object(&self, x: ObjId, e: ArrId) -> Option<ObjId> {
        self.objects.iter().position(|&o| o == (x, e))
    }

    /// The arrow `f: (x, e) -> (y, e')`.
    pub fn arrow(&self, from: ObjId, to: ObjId, f: ArrId) -> Option<ArrId> {
        self.cat
            .hom(from, to)
            .iter()
            .copied()
            .find(|&a| self.forget.arr(a) == f)
    }
}

/// Objects `(X, e)` for every restriction idempotent `e` on `X`
/// (object-major), maps `f: (X, e) -> (Y, e')` with `e f e' = f`, identity
/// `e`, and composition and restriction from `C`.
pub fn split_restriction_idempotents(c: &Arc<FinRestCat>) -> Splitting {
    let mut objects = Vec::new();
    for x in c.objects() {
        for e in c.idempotents(x) {
            objects.push((x, e));
        }
    }
    let mut arrows = Vec::new();
    let mut under = Vec::new();
    let mut index = HashMap::new();
    for (i, &(x, e)) in objects.iter().enumerate() {
        for (j, &(y, e2)) in objects.iter().enumerate() {
            for &f in c.hom(x, y) {
                if c.comp_all(&[e, f, e2]) == f {
                    index.insert((i, j, f), arrows.len());
                    arrows.push((
                        format!("{}:{}>{}", c.arr_name(f), obj_name(c, x, e), obj_name(c, y, e2)),
                        i,
                        j,
                    ));
                    under.push(f);
                }
            }
        }
    }
    let identities = objects
        .iter()
        .enumerate()
        .map(|(i, &(_, e))| index[&(i, i, e)])
        .collect();
    let cat = FinRestCat::from_fn(
        objects.iter().map(|&(x, e)| obj_name(c, x, e)).collect(),
        arrows.clone(),
        identities,
        |f, g| index.get(&(arrows[f].1, arrows[g].2, c.comp(under[f], under[g]))).copied(),
        |f| index.get(&(arrows[f].1, arrows[f].1, c.rst(under[f]))).copied(),
    )
    .expect("split category tables are well formed");
    let cat = Arc::new(cat);
    let forget = RestSemifunctor::new(
        cat.clone(),
        c.clone(),
        objects.iter().map(|o| o.0).collect(),
        under,
    )
    .expect("forgetful maps are in range");
    Splitting {
        cat,
        objects,
        forget,
    }
}

fn obj_name(c: &FinRestCat, x: ObjId, e: ArrId) -> String {
    format!("({},{})", c.obj_name(x), c.arr_name(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::functors::{verify_functor, verify_semifunctor};
    use crate::restriction::{is_r_split, verify_restriction_axioms};

    #[test]
    fn splitting_i2() {
        let c = Arc::new(fixtures::i2());
        let s = split_restriction_idempotents(&c);
        assert_eq!(s.cat.n_objects(), 4);
        assert!(verify_restriction_axioms(&s.cat).passed());
        assert!(verify_semifunctor(&s.forget).passed());
        assert!(!verify_functor(&s.forget).passed());
        assert!(is_r_split(&s.cat));
        let empty = c.arr_by_name("0").unwrap();
        let o = s.object(0, empty).unwrap();
        assert_eq!(s.forget.arr(s.cat.id(o)), empty);
    }

    #[test]
    fn splitting_counts_subsets() {
        let c = Arc::new(fixtures::par2());
        let s = split_restriction_idempotents(&c);
        // 2^0 + 2^1 + 2^2
        assert_eq!(s.cat.n_objects(), 7);
    }
}
