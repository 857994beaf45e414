//! The equational theory of a restriction category and the notions derived
//! from it: the restriction order, partial isomorphisms, idempotent
//! semilattices, precise triangles and splittings.

use crate::category::{ArrId, FinRestCat, ObjId};
use crate::error::{Error, Result};
use crate::report::Report;

/// Checks the category laws and R.1-R.4, recording the first violation of
/// each.
pub fn verify_restriction_axioms(c: &FinRestCat) -> Report {
    let mut report = Report::new("restriction axioms");
    let n = |f: ArrId| c.arr_name(f).to_string();

    let mut unit = None;
    for f in c.arrows() {
        if c.comp(c.id(c.dom(f)), f) != f || c.comp(f, c.id(c.cod(f))) != f {
            unit = Some(n(f));
            break;
        }
    }
    report.record("cat.unit", unit);

    let mut assoc = None;
    'assoc: for f in c.arrows() {
        for &g in c.out_of(c.cod(f)) {
            let fg = c.comp(f, g);
            for &h in c.out_of(c.cod(g)) {
                if c.comp(fg, h) != c.comp(f, c.comp(g, h)) {
                    assoc = Some(format!("({}, {}, {})", n(f), n(g), n(h)));
                    break 'assoc;
                }
            }
        }
    }
    report.record("cat.assoc", assoc);

    let r1 = c
        .arrows()
        .find(|&f| c.comp(c.rst(f), f) != f)
        .map(|f| format!("{} (restriction {})", n(f), n(c.rst(f))));
    report.record("R.1", r1);

    let mut r2 = None;
    let mut r3 = None;
    for x in c.objects() {
        for &f in c.out_of(x) {
            let rf = c.rst(f);
            for &g in c.out_of(x) {
                let rg = c.rst(g);
                if r2.is_none() && c.comp(rf, rg) != c.comp(rg, rf) {
                    r2 = Some(format!("({}, {})", n(f), n(g)));
                }
                if r3.is_none() && c.rst(c.comp(rf, g)) != c.comp(rf, rg) {
                    r3 = Some(format!("({}, {})", n(f), n(g)));
                }
            }
        }
    }
    report.record("R.2", r2);
    report.record("R.3", r3);

    let mut r4 = None;
    'r4: for f in c.arrows() {
        for &g in c.out_of(c.cod(f)) {
            if c.comp(f, c.rst(g)) != c.comp(c.rst(c.comp(f, g)), f) {
                r4 = Some(format!("({}, {})", n(f), n(g)));
                break 'r4;
            }
        }
    }
    report.record("R.4", r4);
    report
}

/// `f <= g` in the restriction order.
pub fn restriction_leq(c: &FinRestCat, f: ArrId, g: ArrId) -> Result<bool> {
    if !c.parallel(f, g) {
        return Err(Error::NotParallel(
            c.arr_name(f).into(),
            c.arr_name(g).into(),
        ));
    }
    Ok(c.le(f, g))
}

/// What kind of arrow something is, computed by search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrowClass {
    pub is_total: bool,
    pub is_restriction_idempotent: bool,
    pub partial_inverse: Option<ArrId>,
    pub is_restriction_monic: bool,
    pub is_restriction_retraction: bool,
}

pub fn classify_arrow(c: &FinRestCat, f: ArrId) -> ArrowClass {
    let is_total = c.is_total(f);
    let partial_inverse = c.partial_inverse(f);
    let inverse_total = partial_inverse.is_some_and(|g| c.is_total(g));
    ArrowClass {
        is_total,
        is_restriction_idempotent: c.is_rest_idem(f),
        partial_inverse,
        is_restriction_monic: is_total && partial_inverse.is_some(),
        is_restriction_retraction: inverse_total,
    }
}

/// The meet semilattice `O(A)` of restriction idempotents on one object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semilattice {
    pub object: ObjId,
    pub elements: Vec<ArrId>,
    /// `meet[i][j]` is the index of `elements[i] elements[j]`.
    pub meet: Vec<Vec<usize>>,
}

impl Semilattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, e: ArrId) -> Option<usize> {
        self.elements.iter().position(|&x| x == e)
    }

    /// `elements[i] <= elements[j]`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.meet[i][j] == i
    }
}

pub fn restriction_idempotents(c: &FinRestCat, a: ObjId) -> Semilattice {
    let elements = c.idempotents(a);
    let meet = elements
        .iter()
        .map(|&e| {
            elements
                .iter()
                .map(|&d| {
                    let ed = c.comp(e, d);
                    elements
                        .iter()
                        .position(|&x| x == ed)
                        .expect("restriction idempotents are closed under composition")
                })
                .collect()
        })
        .collect();
    Semilattice {
        object: a,
        elements,
        meet,
    }
}

/// Whether `k` followed by `f` is a precise triangle over `g`: it commutes and
/// `k` has the same restriction as `g`.
pub fn is_precise_triangle(c: &FinRestCat, k: ArrId, f: ArrId, g: ArrId) -> Result<bool> {
    let kf = c.try_comp(k, f)?;
    if !c.parallel(kf, g) {
        return Err(Error::NotParallel(c.arr_name(kf).into(), c.arr_name(g).into()));
    }
    Ok(kf == g && c.rst(g) == c.rst(k))
}

/// The other characterisation of a precise triangle: it commutes and
/// `k \bar f = k`.
pub fn is_precise_by_left_factor(c: &FinRestCat, k: ArrId, f: ArrId, g: ArrId) -> bool {
    c.comp(k, f) == g && c.comp(k, c.rst(f)) == k
}

/// A splitting `(r, m)` of the idempotent `e`: `r m = e` and `m r = 1`.
pub fn splitting(c: &FinRestCat, e: ArrId) -> Option<(ArrId, ArrId)> {
    splittings(c, e).next()
}

pub fn splittings(c: &FinRestCat, e: ArrId) -> impl Iterator<Item = (ArrId, ArrId)> + '_ {
    let x = c.dom(e);
    c.out_of(x).iter().flat_map(move |&r| {
        let z = c.cod(r);
        c.hom(z, x)
            .iter()
            .filter(move |&&m| c.comp(r, m) == e && c.comp(m, r) == c.id(z))
            .map(move |&m| (r, m))
    })
}

/// Every restriction idempotent splits.
pub fn is_r_split(c: &FinRestCat) -> bool {
    first_unsplit(c).is_none()
}

pub fn first_unsplit(c: &FinRestCat) -> Option<ArrId> {
    c.arrows()
        .filter(|&e| c.is_rest_idem(e))
        .find(|&e| splitting(c, e).is_none())
}

/// The subcategory of total maps on all objects; returns it with the map from
/// its arrows back into `c`.
pub fn total_subcategory(c: &FinRestCat) -> (FinRestCat, Vec<ArrId>) {
    let objs: Vec<ObjId> = c.objects().collect();
    let arrs: Vec<ArrId> = c.arrows().filter(|&f| c.is_total(f)).collect();
    let (t, _, arrs) = c
        .subcategory(&objs, &arrs)
        .expect("total maps form a subcategory");
    (t, arrs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn i2_semilattice_is_the_subsets_of_two() {
        let c = fixtures::i2();
        let o = restriction_idempotents(&c, 0);
        // the partial identities on {}, {a}, {b} and {a,b}
        assert_eq!(o.len(), 4);
        let idx = |n| o.index_of(c.arr_by_name(n).unwrap()).unwrap();
        assert!(o.leq(idx("0"), idx("a>a")));
        assert!(o.leq(idx("b>b"), idx("1")));
        assert!(!o.leq(idx("a>a"), idx("b>b")));
        assert_eq!(o.meet[idx("a>a")][idx("b>b")], idx("0"));
    }

    #[test]
    fn swap_is_partial_iso_but_not_idempotent() {
        let c = fixtures::i2();
        let ab = c.arr_by_name("a>b").unwrap();
        let class = classify_arrow(&c, ab);
        assert_eq!(class.partial_inverse, Some(c.arr_by_name("b>a").unwrap()));
        assert!(!class.is_restriction_idempotent);
        assert!(!class.is_total);
    }

    #[test]
    fn precise_triangle_errors_on_bad_shape() {
        let c = fixtures::par2();
        let inc = c.arr_by_name("{a}>{a,b}:a>a").unwrap();
        assert!(matches!(
            is_precise_triangle(&c, inc, inc, inc),
            Err(Error::NotComposable(..))
        ));
    }
}
