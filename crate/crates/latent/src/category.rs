//! Finite restriction categories stored as dense tables.
//!
//! Composition is written in diagrammatic order throughout: `comp(f, g)` is
//! "f then g" and needs `cod(f) == dom(g)`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub type ObjId = usize;
pub type ArrId = usize;

/// A finite category with a restriction operator, held as explicit tables.
///
/// The tables are validated for shape when built (every composable pair has
/// an entry of the right type, identities and restrictions are endomorphisms
/// on the right object). The equational laws are *not* assumed; see
/// [`crate::restriction::verify_restriction_axioms`].
#[derive(Clone)]
pub struct FinRestCat {
    obj_names: Vec<String>,
    arr_names: Vec<String>,
    dom: Vec<ObjId>,
    cod: Vec<ObjId>,
    ident: Vec<ArrId>,
    rest: Vec<ArrId>,
    out: Vec<Vec<ArrId>>,
    inc: Vec<Vec<ArrId>>,
    hom: Vec<Vec<ArrId>>,
    // position of each arrow inside `out[dom]`
    out_pos: Vec<u32>,
    // row offset of each arrow: row length is `out[cod].len()`
    comp_off: Vec<usize>,
    comp: Vec<u32>,
    obj_index: HashMap<String, ObjId>,
    arr_index: HashMap<String, ArrId>,
}

impl FinRestCat {
    /// Builds a category from its arrow list and two table functions.
    ///
    /// `compose(f, g)` is only called on composable pairs and `restriction(f)`
    /// once per arrow; returning `None` is a malformed-table error.
    pub fn from_fn(
        objects: Vec<String>,
        arrows: Vec<(String, ObjId, ObjId)>,
        identities: Vec<ArrId>,
        mut compose: impl FnMut(ArrId, ArrId) -> Option<ArrId>,
        mut restriction: impl FnMut(ArrId) -> Option<ArrId>,
    ) -> Result<Self> {
        let n = objects.len();
        let m = arrows.len();
        if identities.len() != n {
            return Err(Error::MalformedTable(format!(
                "{} identities for {} objects",
                identities.len(),
                n
            )));
        }
        let mut obj_index = HashMap::with_capacity(n);
        for (i, name) in objects.iter().enumerate() {
            if obj_index.insert(name.clone(), i).is_some() {
                return Err(Error::MalformedTable(format!("duplicate object `{name}`")));
            }
        }
        let mut arr_index = HashMap::with_capacity(m);
        let mut arr_names = Vec::with_capacity(m);
        let mut dom = Vec::with_capacity(m);
        let mut cod = Vec::with_capacity(m);
        for (i, (name, d, c)) in arrows.into_iter().enumerate() {
            if d >= n || c >= n {
                return Err(Error::MalformedTable(format!(
                    "arrow `{name}` has an endpoint out of range"
                )));
            }
            if arr_index.insert(name.clone(), i).is_some() {
                return Err(Error::MalformedTable(format!("duplicate arrow `{name}`")));
            }
            arr_names.push(name);
            dom.push(d);
            cod.push(c);
        }
        u32::try_from(m).map_err(|_| Error::MalformedTable("too many arrows".into()))?;

        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut hom = vec![Vec::new(); n * n];
        let mut out_pos = vec![0u32; m];
        for f in 0..m {
            out_pos[f] = out[dom[f]].len() as u32;
            out[dom[f]].push(f);
            inc[cod[f]].push(f);
            hom[dom[f] * n + cod[f]].push(f);
        }

        for (x, &i) in identities.iter().enumerate() {
            if i >= m || dom[i] != x || cod[i] != x {
                return Err(Error::MalformedTable(format!(
                    "identity of `{}` is not an endomorphism on it",
                    objects[x]
                )));
            }
        }

        let mut comp_off = Vec::with_capacity(m);
        let mut total = 0usize;
        for f in 0..m {
            comp_off.push(total);
            total += out[cod[f]].len();
        }
        let mut comp = Vec::with_capacity(total);
        for f in 0..m {
            for &g in &out[cod[f]] {
                let fg = compose(f, g).ok_or_else(|| {
                    Error::MalformedTable(format!(
                        "missing composite of `{}` then `{}`",
                        arr_names[f], arr_names[g]
                    ))
                })?;
                if fg >= m || dom[fg] != dom[f] || cod[fg] != cod[g] {
                    return Err(Error::MalformedTable(format!(
                        "composite of `{}` then `{}` has the wrong type",
                        arr_names[f], arr_names[g]
                    )));
                }
                comp.push(fg as u32);
            }
        }

        let mut rest = Vec::with_capacity(m);
        for f in 0..m {
            let r = restriction(f).ok_or_else(|| {
                Error::MalformedTable(format!("missing restriction of `{}`", arr_names[f]))
            })?;
            if r >= m || dom[r] != dom[f] || cod[r] != dom[f] {
                return Err(Error::MalformedTable(format!(
                    "restriction of `{}` is not an endomorphism on its domain",
                    arr_names[f]
                )));
            }
            rest.push(r);
        }

        Ok(FinRestCat {
            obj_names: objects,
            arr_names,
            dom,
            cod,
            ident: identities,
            rest,
            out,
            inc,
            hom,
            out_pos,
            comp_off,
            comp,
            obj_index,
            arr_index,
        })
    }

    /// The category with no objects and no arrows.
    pub fn empty() -> Self {
        Self::from_fn(vec![], vec![], vec![], |_, _| None, |_| None).expect("empty category")
    }

    pub fn n_objects(&self) -> usize {
        self.obj_names.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arr_names.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.n_objects()
    }

    pub fn arrows(&self) -> std::ops::Range<ArrId> {
        0..self.n_arrows()
    }

    pub fn dom(&self, f: ArrId) -> ObjId {
        self.dom[f]
    }

    pub fn cod(&self, f: ArrId) -> ObjId {
        self.cod[f]
    }

    pub fn id(&self, x: ObjId) -> ArrId {
        self.ident[x]
    }

    /// The restriction `\bar f`.
    pub fn rst(&self, f: ArrId) -> ArrId {
        self.rest[f]
    }

    /// `f` then `g`. Panics if they are not composable.
    #[inline]
    pub fn comp(&self, f: ArrId, g: ArrId) -> ArrId {
        debug_assert_eq!(self.cod[f], self.dom[g], "composing non-composable arrows");
        self.comp[self.comp_off[f] + self.out_pos[g] as usize] as ArrId
    }

    /// Left-to-right composite of a nonempty path.
    pub fn comp_all(&self, path: &[ArrId]) -> ArrId {
        let mut it = path.iter();
        let first = *it.next().expect("empty path");
        it.fold(first, |acc, &g| self.comp(acc, g))
    }

    pub fn try_comp(&self, f: ArrId, g: ArrId) -> Result<ArrId> {
        if self.cod[f] != self.dom[g] {
            return Err(Error::NotComposable(
                self.arr_names[f].clone(),
                self.arr_names[g].clone(),
            ));
        }
        Ok(self.comp(f, g))
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[ArrId] {
        &self.hom[a * self.n_objects() + b]
    }

    pub fn out_of(&self, a: ObjId) -> &[ArrId] {
        &self.out[a]
    }

    pub fn into(&self, b: ObjId) -> &[ArrId] {
        &self.inc[b]
    }

    pub fn parallel(&self, f: ArrId, g: ArrId) -> bool {
        self.dom[f] == self.dom[g] && self.cod[f] == self.cod[g]
    }

    pub fn obj_name(&self, x: ObjId) -> &str {
        &self.obj_names[x]
    }

    pub fn arr_name(&self, f: ArrId) -> &str {
        &self.arr_names[f]
    }

    pub fn obj_names(&self) -> &[String] {
        &self.obj_names
    }

    pub fn arr_names(&self) -> &[String] {
        &self.arr_names
    }

    pub fn obj_by_name(&self, name: &str) -> Result<ObjId> {
        self.obj_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn arr_by_name(&self, name: &str) -> Result<ArrId> {
        self.arr_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn is_identity(&self, f: ArrId) -> bool {
        self.ident[self.dom[f]] == f
    }

    pub fn is_total(&self, f: ArrId) -> bool {
        self.rest[f] == self.ident[self.dom[f]]
    }

    pub fn is_rest_idem(&self, f: ArrId) -> bool {
        self.rest[f] == f
    }

    /// `f <= g` in the restriction order. Assumes `f` and `g` are parallel.
    #[inline]
    pub fn le(&self, f: ArrId, g: ArrId) -> bool {
        self.comp(self.rest[f], g) == f
    }

    /// The unique partial inverse, if `f` is a partial isomorphism.
    pub fn partial_inverse(&self, f: ArrId) -> Option<ArrId> {
        self.hom(self.cod[f], self.dom[f])
            .iter()
            .copied()
            .find(|&g| self.comp(f, g) == self.rest[f] && self.comp(g, f) == self.rest[g])
    }

    pub fn is_partial_iso(&self, f: ArrId) -> bool {
        self.partial_inverse(f).is_some()
    }

    /// Two-sided inverse, for categories used as plain categories.
    pub fn inverse(&self, f: ArrId) -> Option<ArrId> {
        let (a, b) = (self.dom[f], self.cod[f]);
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.comp(f, g) == self.ident[a] && self.comp(g, f) == self.ident[b])
    }

    /// The restriction idempotents on `x`, in arrow order.
    pub fn idempotents(&self, x: ObjId) -> Vec<ArrId> {
        self.hom(x, x)
            .iter()
            .copied()
            .filter(|&e| self.rest[e] == e)
            .collect()
    }

    /// Same data with the restriction of `f` replaced by `r` (no
    /// validation of the laws; used to build counterexamples).
    pub fn with_restriction(&self, f: ArrId, r: ArrId) -> Result<Self> {
        let mut rest = self.rest.clone();
        rest[f] = r;
        self.rebuild(|g| rest[g])
    }

    /// Same category with every restriction an identity.
    pub fn with_trivial_restriction(&self) -> Self {
        self.rebuild(|f| self.ident[self.dom[f]])
            .expect("identities are endomorphisms")
    }

    fn rebuild(&self, rest: impl Fn(ArrId) -> ArrId) -> Result<Self> {
        let arrows = self
            .arrows()
            .map(|f| (self.arr_names[f].clone(), self.dom[f], self.cod[f]))
            .collect();
        Self::from_fn(
            self.obj_names.clone(),
            arrows,
            self.ident.clone(),
            |f, g| Some(self.comp(f, g)),
            |f| Some(rest(f)),
        )
    }

    /// The subcategory on the given objects and arrows, with fresh dense ids.
    /// Returns the new category and the maps new id -> old id.
    pub fn subcategory(
        &self,
        objs: &[ObjId],
        arrs: &[ArrId],
    ) -> Result<(FinRestCat, Vec<ObjId>, Vec<ArrId>)> {
        let mut obj_new = vec![usize::MAX; self.n_objects()];
        for (i, &x) in objs.iter().enumerate() {
            obj_new[x] = i;
        }
        let mut arr_new = vec![usize::MAX; self.n_arrows()];
        for (i, &f) in arrs.iter().enumerate() {
            arr_new[f] = i;
        }
        let mut arrows = Vec::with_capacity(arrs.len());
        for &f in arrs {
            let (d, c) = (obj_new[self.dom[f]], obj_new[self.cod[f]]);
            if d == usize::MAX || c == usize::MAX {
                return Err(Error::MalformedTable(format!(
                    "arrow `{}` leaves the chosen objects",
                    self.arr_names[f]
                )));
            }
            arrows.push((self.arr_names[f].clone(), d, c));
        }
        let mut identities = Vec::with_capacity(objs.len());
        for &x in objs {
            let i = arr_new[self.ident[x]];
            if i == usize::MAX {
                return Err(Error::MalformedTable(format!(
                    "identity of `{}` is missing",
                    self.obj_names[x]
                )));
            }
            identities.push(i);
        }
        let lookup = |f: ArrId| (arr_new[f] != usize::MAX).then_some(arr_new[f]);
        let cat = Self::from_fn(
            objs.iter().map(|&x| self.obj_names[x].clone()).collect(),
            arrows,
            identities,
            |f, g| lookup(self.comp(arrs[f], arrs[g])),
            |f| lookup(self.rest[arrs[f]]),
        )?;
        Ok((cat, objs.to_vec(), arrs.to_vec()))
    }

    /// Arrow-by-arrow equality of the tables, names included.
    pub fn same_tables(&self, other: &FinRestCat) -> bool {
        self.obj_names == other.obj_names
            && self.arr_names == other.arr_names
            && self.dom == other.dom
            && self.cod == other.cod
            && self.ident == other.ident
            && self.rest == other.rest
            && self.comp_off == other.comp_off
            && self.comp == other.comp
    }
}

impl PartialEq for FinRestCat {
    fn eq(&self, other: &Self) -> bool {
        self.same_tables(other)
    }
}

impl Eq for FinRestCat {}

impl fmt::Debug for FinRestCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinRestCat")
            .field("objects", &self.n_objects())
            .field("arrows", &self.n_arrows())
            .finish()
    }
}
