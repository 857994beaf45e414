//! The standard examples of latent fibrations, built as finite tables.
//!
//! Each builder returns the total category together with the structured
//! data behind its objects and arrows, so tests can look arrows up by their
//! components.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::Arc;

use crate::cartesian::{verify_cartesian_structure, CartesianStructure};
use crate::category::{ArrId, FinRestCat, ObjId};
use crate::error::{Error, Result};
use crate::fibration::{certify_latent_fibration, FibrationReport};
use crate::functors::{verify_functor, RestSemifunctor};
use crate::split::{split_restriction_idempotents, Splitting};

/// Lax or strict variant of the simple slice and codomain fibrations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Strict,
    Lax,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strict" => Ok(Mode::Strict),
            "lax" => Ok(Mode::Lax),
            _ => Err(format!("unknown mode `{s}` (expected strict or lax)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Lax => "lax",
        })
    }
}

/// A category tabulated from structured objects `O` and arrow data `A`.
/// An arrow is identified by its endpoints and its data.
#[derive(Debug, Clone)]
pub struct Tabulated<O, A> {
    pub cat: Arc<FinRestCat>,
    pub objects: Vec<O>,
    pub arrows: Vec<A>,
    obj_index: HashMap<O, ObjId>,
    arr_index: HashMap<(ObjId, ObjId, A), ArrId>,
}

impl<O: Clone + Eq + Hash, A: Clone + Eq + Hash> Tabulated<O, A> {
    pub fn object(&self, o: &O) -> Option<ObjId> {
        self.obj_index.get(o).copied()
    }

    pub fn arrow(&self, dom: ObjId, cod: ObjId, a: &A) -> Option<ArrId> {
        self.arr_index.get(&(dom, cod, a.clone())).copied()
    }
}

/// Builds the tables. `comp` receives the domain of the first arrow and the
/// data of both, `rst` the domain and data of one arrow.
fn tabulate<O, A>(
    objects: Vec<O>,
    arrows: Vec<(ObjId, ObjId, A)>,
    obj_name: impl Fn(&O) -> String,
    arr_name: impl Fn(&A) -> String,
    id: impl Fn(ObjId) -> A,
    comp: impl Fn(ObjId, &A, &A) -> A,
    rst: impl Fn(ObjId, &A) -> A,
) -> Result<Tabulated<O, A>>
where
    O: Clone + Eq + Hash,
    A: Clone + Eq + Hash,
{
    let obj_names: Vec<String> = objects.iter().map(&obj_name).collect();
    let obj_index = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
    let arr_index: HashMap<(ObjId, ObjId, A), ArrId> = arrows
        .iter()
        .enumerate()
        .map(|(i, (d, c, a))| ((*d, *c, a.clone()), i))
        .collect();
    let missing = |x: ObjId| {
        Error::MalformedTable(format!("no identity at `{}`", obj_names[x]))
    };
    let identities = (0..objects.len())
        .map(|x| arr_index.get(&(x, x, id(x))).copied().ok_or_else(|| missing(x)))
        .collect::<Result<Vec<_>>>()?;
    let named = arrows
        .iter()
        .map(|(d, c, a)| {
            (format!("{}: {} -> {}", arr_name(a), obj_names[*d], obj_names[*c]), *d, *c)
        })
        .collect();
    let cat = FinRestCat::from_fn(
        obj_names.clone(),
        named,
        identities,
        |f, g| {
            let (d, _, a) = &arrows[f];
            let (_, c, b) = &arrows[g];
            arr_index.get(&(*d, *c, comp(*d, a, b))).copied()
        },
        |f| {
            let (d, _, a) = &arrows[f];
            arr_index.get(&(*d, *d, rst(*d, a))).copied()
        },
    )?;
    Ok(Tabulated {
        cat: Arc::new(cat),
        objects,
        arrows: arrows.into_iter().map(|(_, _, a)| a).collect(),
        obj_index,
        arr_index,
    })
}

/// A constructed fibration: the structured total category, the projection
/// and its certification.
#[derive(Debug, Clone)]
pub struct Construction<O, A> {
    pub total: Tabulated<O, A>,
    pub report: FibrationReport,
}

impl<O, A> Construction<O, A> {
    pub fn p(&self) -> &RestSemifunctor {
        &self.report.p
    }
}

fn certify<O, A>(
    total: Tabulated<O, A>,
    base: Arc<FinRestCat>,
    obj_map: Vec<ObjId>,
    arr_map: Vec<ArrId>,
) -> Result<Construction<O, A>> {
    let p = RestSemifunctor::new(total.cat.clone(), base, obj_map, arr_map)?;
    Ok(Construction {
        report: certify_latent_fibration(&p),
        total,
    })
}

pub fn identity_fibration(c: &Arc<FinRestCat>) -> FibrationReport {
    certify_latent_fibration(&RestSemifunctor::identity(c.clone()))
}

/// `Y x X` with componentwise structure.
pub fn product_category(y: &FinRestCat, x: &FinRestCat) -> Result<Tabulated<(ObjId, ObjId), (ArrId, ArrId)>> {
    let objects: Vec<(ObjId, ObjId)> = y.objects().flat_map(|a| x.objects().map(move |b| (a, b))).collect();
    let mut arrows = Vec::new();
    for (i, &(a, b)) in objects.iter().enumerate() {
        for (j, &(a2, b2)) in objects.iter().enumerate() {
            for &f in y.hom(a, a2) {
                for &g in x.hom(b, b2) {
                    arrows.push((i, j, (f, g)));
                }
            }
        }
    }
    tabulate(
        objects.clone(),
        arrows,
        |&(a, b)| format!("({},{})", y.obj_name(a), x.obj_name(b)),
        |&(f, g)| format!("({},{})", y.arr_name(f), x.arr_name(g)),
        |i| (y.id(objects[i].0), x.id(objects[i].1)),
        |_, &(f, g), &(f2, g2)| (y.comp(f, f2), x.comp(g, g2)),
        |_, &(f, g)| (y.rst(f), x.rst(g)),
    )
}

pub type ProductFibration = Construction<(ObjId, ObjId), (ArrId, ArrId)>;

/// `pi1: Y x X -> X`. The prone lift of `f` at `(Y, X')` is `1 x f`.
pub fn projection_fibration(y: &FinRestCat, x: &Arc<FinRestCat>) -> Result<ProductFibration> {
    let total = product_category(y, x)?;
    let obj_map = total.objects.iter().map(|o| o.1).collect();
    let arr_map = total.arrows.iter().map(|a| a.1).collect();
    certify(total, x.clone(), obj_map, arr_map)
}

/// Objects `(Sigma, X)`, arrows `(f, f')` with `f: Sigma -> Sigma'` and
/// `f': Sigma x X -> X'`.
pub type SimpleSlice = Construction<(ObjId, ObjId), (ArrId, ArrId)>;

fn require_cartesian(c: &FinRestCat, cart: &CartesianStructure) -> Result<()> {
    let report = verify_cartesian_structure(c, cart);
    let failure = report.failures().next().map(|clause| {
        format!("{}: {}", clause.id, clause.witness.clone().unwrap_or_default())
    });
    failure.map_or(Ok(()), |w| Err(Error::NotCartesian(w)))
}

/// The lax or strict simple slice `X(X) -> X` or `X[X] -> X`. The prone
/// lift of `f: Sigma -> Sigma'` at `(Sigma', X)` is `(f, \bar{pi0 f} pi1)`.
pub fn simple_slice(c: &Arc<FinRestCat>, cart: &CartesianStructure, mode: Mode) -> Result<SimpleSlice> {
    require_cartesian(c, cart)?;
    let prod = |s: ObjId, x: ObjId| cart.product(s, x).expect("products are complete");
    let objects: Vec<(ObjId, ObjId)> =
        c.objects().flat_map(|s| c.objects().map(move |x| (s, x))).collect();
    let mut arrows = Vec::new();
    for (i, &(s, x)) in objects.iter().enumerate() {
        let sx = prod(s, x);
        for (j, &(s2, x2)) in objects.iter().enumerate() {
            for &f in c.hom(s, s2) {
                let bound = c.rst(c.comp(sx.pi0, f));
                for &f2 in c.hom(sx.object, x2) {
                    let ok = match mode {
                        Mode::Lax => c.le(c.rst(f2), bound),
                        Mode::Strict => c.rst(f2) == bound,
                    };
                    if ok {
                        arrows.push((i, j, (f, f2)));
                    }
                }
            }
        }
    }
    let total = tabulate(
        objects.clone(),
        arrows,
        |&(s, x)| format!("({},{})", c.obj_name(s), c.obj_name(x)),
        |&(f, f2)| format!("({},{})", c.arr_name(f), c.arr_name(f2)),
        |i| {
            let (s, x) = objects[i];
            (c.id(s), prod(s, x).pi1)
        },
        |d, &(f, f2), &(g, g2)| {
            let (s, x) = objects[d];
            let pair = cart
                .pair(c, c.comp(prod(s, x).pi0, f), f2)
                .expect("pairings exist in a Cartesian restriction category");
            (c.comp(f, g), c.comp(pair, g2))
        },
        |d, &(f, f2)| {
            let (s, x) = objects[d];
            (c.rst(f), c.comp(c.rst(f2), prod(s, x).pi1))
        },
    )?;
    let obj_map = total.objects.iter().map(|o| o.0).collect();
    let arr_map = total.arrows.iter().map(|a| a.0).collect();
    certify(total, c.clone(), obj_map, arr_map)
}

/// Objects are arrows `a: A' -> A`; an arrow `a -> b` is `(f, f')` with
/// `f: A -> B` below and `f': A' -> B'` on top.
pub type Codomain = Construction<ArrId, (ArrId, ArrId)>;

/// The lax (`f' b <= a f`) or strict (`f' b = a f`) arrow category, with
/// `f' \bar b = f'` in both, projected to the codomain. The identity on `a`
/// is `(1, \bar a)`: the pair of identities is not semi-precise unless `a`
/// is total.
pub fn codomain(c: &Arc<FinRestCat>, mode: Mode) -> Result<Codomain> {
    let objects: Vec<ArrId> = c.arrows().collect();
    let mut arrows = Vec::new();
    for &a in &objects {
        for &b in &objects {
            for &f in c.hom(c.cod(a), c.cod(b)) {
                let af = c.comp(a, f);
                for &f2 in c.hom(c.dom(a), c.dom(b)) {
                    let top = c.comp(f2, b);
                    let ok = match mode {
                        Mode::Lax => c.le(top, af),
                        Mode::Strict => top == af,
                    };
                    if ok && c.comp(f2, c.rst(b)) == f2 {
                        arrows.push((a, b, (f, f2)));
                    }
                }
            }
        }
    }
    let total = tabulate(
        objects,
        arrows,
        |&a| c.arr_name(a).to_string(),
        |&(f, f2)| format!("({},{})", c.arr_name(f), c.arr_name(f2)),
        |a| (c.id(c.cod(a)), c.rst(a)),
        |_, &(f, f2), &(g, g2)| (c.comp(f, g), c.comp(f2, g2)),
        |_, &(f, f2)| (c.rst(f), c.rst(f2)),
    )?;
    let obj_map = total.objects.iter().map(|&a| c.cod(a)).collect();
    let arr_map = total.arrows.iter().map(|a| a.0).collect();
    certify(total, c.clone(), obj_map, arr_map)
}

/// A presheaf `F: C^op -> Set` on finite sets `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    pub sizes: Vec<usize>,
    /// `action[f][y]` is `F(f)(y)` for `f: X -> Y` and `y` in `F(Y)`.
    pub action: Vec<Vec<usize>>,
}

impl Presheaf {
    /// The constant one-point presheaf.
    pub fn terminal(c: &FinRestCat) -> Self {
        Presheaf {
            sizes: vec![1; c.n_objects()],
            action: vec![vec![0]; c.n_arrows()],
        }
    }

    /// `n` points everywhere; total maps act as the identity and the other
    /// maps collapse everything onto `0`. Only a functor when totality of
    /// a composite forces totality of both factors.
    pub fn collapsing(c: &FinRestCat, n: usize) -> Result<Self> {
        let action = c
            .arrows()
            .map(|f| if c.is_total(f) { (0..n).collect() } else { vec![0; n] })
            .collect();
        let f = Presheaf {
            sizes: vec![n; c.n_objects()],
            action,
        };
        f.verify(c)?;
        Ok(f)
    }

    /// Shape and functoriality, ignoring restriction.
    pub fn verify(&self, c: &FinRestCat) -> Result<()> {
        let bad = |what: String| Err(Error::NotAFunctor(format!("presheaf: {what}")));
        if self.sizes.len() != c.n_objects() || self.action.len() != c.n_arrows() {
            return bad("tables do not cover the category".into());
        }
        for f in c.arrows() {
            let (x, y) = (c.dom(f), c.cod(f));
            if self.action[f].len() != self.sizes[y] || self.action[f].iter().any(|&v| v >= self.sizes[x]) {
                return bad(format!("`{}` is mistyped", c.arr_name(f)));
            }
        }
        for x in c.objects() {
            if self.action[c.id(x)].iter().enumerate().any(|(i, &v)| i != v) {
                return bad(format!("identity of `{}` acts nontrivially", c.obj_name(x)));
            }
        }
        for f in c.arrows() {
            for &g in c.out_of(c.cod(f)) {
                let fg = c.comp(f, g);
                if (0..self.sizes[c.cod(g)]).any(|z| self.action[fg][z] != self.action[f][self.action[g][z]]) {
                    return bad(format!("`{}` then `{}`", c.arr_name(f), c.arr_name(g)));
                }
            }
        }
        Ok(())
    }
}

pub type Elements = Construction<(ObjId, usize), ArrId>;

/// `Elt(F)` with restriction from `C`. The prone lift of `f: X -> Y` at
/// `(Y, y)` is `f: (X, F(f)(y)) -> (Y, y)`.
pub fn elements(c: &Arc<FinRestCat>, presheaf: &Presheaf) -> Result<Elements> {
    presheaf.verify(c)?;
    let objects: Vec<(ObjId, usize)> = c
        .objects()
        .flat_map(|x| (0..presheaf.sizes[x]).map(move |e| (x, e)))
        .collect();
    let mut arrows = Vec::new();
    for (i, &(x, e)) in objects.iter().enumerate() {
        for (j, &(y, e2)) in objects.iter().enumerate() {
            for &f in c.hom(x, y) {
                if presheaf.action[f][e2] == e {
                    arrows.push((i, j, f));
                }
            }
        }
    }
    let total = tabulate(
        objects.clone(),
        arrows,
        |&(x, e)| format!("({},{})", c.obj_name(x), e),
        |&f| c.arr_name(f).to_string(),
        |i| c.id(objects[i].0),
        |_, &f, &g| c.comp(f, g),
        |_, &f| c.rst(f),
    )?;
    let obj_map = total.objects.iter().map(|o| o.0).collect();
    let arr_map = total.arrows.clone();
    certify(total, c.clone(), obj_map, arr_map)
}

pub type Propositions = Construction<(ObjId, ArrId), ArrId>;

/// `O(C)`: objects `(X, e)`, maps `f` with `e <= \bar{f e'}`. The prone lift
/// of `f: X' -> X` at `(X, e)` is `f: (X', \bar{fe}) -> (X, e)`.
pub fn propositions(c: &Arc<FinRestCat>) -> Result<Propositions> {
    let objects: Vec<(ObjId, ArrId)> = c
        .objects()
        .flat_map(|x| c.idempotents(x).into_iter().map(move |e| (x, e)))
        .collect();
    let mut arrows = Vec::new();
    for (i, &(x, e)) in objects.iter().enumerate() {
        for (j, &(y, e2)) in objects.iter().enumerate() {
            for &f in c.hom(x, y) {
                if c.le(e, c.rst(c.comp(f, e2))) {
                    arrows.push((i, j, f));
                }
            }
        }
    }
    let total = tabulate(
        objects.clone(),
        arrows,
        |&(x, e)| format!("({},{})", c.obj_name(x), c.arr_name(e)),
        |&f| c.arr_name(f).to_string(),
        |i| c.id(objects[i].0),
        |_, &f, &g| c.comp(f, g),
        |_, &f| c.rst(f),
    )?;
    let obj_map = total.objects.iter().map(|o| o.0).collect();
    let arr_map = total.arrows.clone();
    certify(total, c.clone(), obj_map, arr_map)
}

/// An assembly `phi in O(F(A) x X)`, recorded as `(A, X, phi)`.
pub type Assembly = (ObjId, ObjId, ArrId);

pub type Assemblies = Construction<Assembly, ArrId>;

/// The tracking maps `gamma: A -> A'` making `f: X -> X'` a map of
/// assemblies `phi -> phi'` (conditions Tk.1 and Tk.2).
pub fn trackings(
    realizers: &RestSemifunctor,
    cart: &CartesianStructure,
    from: Assembly,
    to: Assembly,
    f: ArrId,
) -> Vec<ArrId> {
    let (a, x) = (&*realizers.source, &*realizers.target);
    let ((a0, _, phi), (a1, _, phi2)) = (from, to);
    let one_f = cart
        .times(x, x.id(realizers.obj(a0)), f)
        .expect("products are complete");
    let lhs2 = x.rst(x.comp(phi, one_f));
    a.hom(a0, a1)
        .iter()
        .copied()
        .filter(|&g| {
            let t = cart.times(x, realizers.arr(g), f).expect("products are complete");
            let pt = x.comp(phi, t);
            pt == x.comp(pt, phi2) && lhs2 == x.rst(pt)
        })
        .collect()
}

/// `Asm(F) -> X` for a restriction functor `F: A -> X` into a Cartesian
/// restriction category. The prone lift of `f: X -> Y` at `psi` is
/// `f: \bar{(1 x f) psi} -> psi`.
pub fn assemblies(realizers: &RestSemifunctor, cart: &CartesianStructure) -> Result<Assemblies> {
    let (a, x) = (&*realizers.source, &realizers.target);
    require_cartesian(x, cart)?;
    let functor = verify_functor(realizers);
    if let Some(clause) = functor.failures().next() {
        return Err(Error::NotAFunctor(format!(
            "realizers: {} {}",
            clause.id,
            clause.witness.clone().unwrap_or_default()
        )));
    }
    let prod = |s: ObjId, t: ObjId| cart.product(s, t).expect("products are complete");
    let mut objects = Vec::new();
    for r in a.objects() {
        for b in x.objects() {
            for phi in x.idempotents(prod(realizers.obj(r), b).object) {
                objects.push((r, b, phi));
            }
        }
    }
    let mut arrows = Vec::new();
    for (i, &from) in objects.iter().enumerate() {
        for (j, &to) in objects.iter().enumerate() {
            for &f in x.hom(from.1, to.1) {
                if !trackings(realizers, cart, from, to, f).is_empty() {
                    arrows.push((i, j, f));
                }
            }
        }
    }
    let total = tabulate(
        objects.clone(),
        arrows,
        |&(r, b, phi)| format!("({},{},{})", a.obj_name(r), x.obj_name(b), x.arr_name(phi)),
        |&f| x.arr_name(f).to_string(),
        |i| x.id(objects[i].1),
        |_, &f, &g| x.comp(f, g),
        |_, &f| x.rst(f),
    )?;
    let obj_map = total.objects.iter().map(|o| o.1).collect();
    let arr_map = total.arrows.clone();
    certify(total, x.clone(), obj_map, arr_map)
}

/// `U: Split_r(C) -> C`, certified.
pub fn splitting_projection(c: &Arc<FinRestCat>) -> (Splitting, FibrationReport) {
    let s = split_restriction_idempotents(c);
    let report = certify_latent_fibration(&s.forget);
    (s, report)
}

/// The embedding of the simple slice into the codomain fibration of the
/// same mode: `(Sigma, X) -> pi0: Sigma x X -> Sigma` and
/// `(f, f') -> (f, <pi0 f, f'>)`. Returns `(F1, F0)` with `F0` the identity.
pub fn slice_into_codomain(
    c: &Arc<FinRestCat>,
    cart: &CartesianStructure,
    slice: &SimpleSlice,
    cod: &Codomain,
) -> Result<(RestSemifunctor, RestSemifunctor)> {
    let prod = |s: ObjId, x: ObjId| cart.product(s, x).expect("products are complete");
    let sc = &*slice.total.cat;
    let obj_map = slice
        .total
        .objects
        .iter()
        .map(|&(s, x)| {
            cod.total
                .object(&prod(s, x).pi0)
                .ok_or_else(|| Error::Mismatch("projection missing from the arrow category".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut arr_map = Vec::with_capacity(sc.n_arrows());
    for (k, &(f, f2)) in slice.total.arrows.iter().enumerate() {
        let (s, x) = slice.total.objects[sc.dom(k)];
        let pair = cart
            .pair(c, c.comp(prod(s, x).pi0, f), f2)
            .expect("pairings exist in a Cartesian restriction category");
        let (d, e) = (obj_map[sc.dom(k)], obj_map[sc.cod(k)]);
        arr_map.push(cod.total.arrow(d, e, &(f, pair)).ok_or_else(|| {
            Error::Mismatch(format!("`{}` has no image square", sc.arr_name(k)))
        })?);
    }
    let f1 = RestSemifunctor::new(slice.total.cat.clone(), cod.total.cat.clone(), obj_map, arr_map)?;
    Ok((f1, RestSemifunctor::identity(c.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartesian::find_cartesian_structure;
    use crate::fixtures;
    use crate::restriction::verify_restriction_axioms;

    fn par1() -> (Arc<FinRestCat>, CartesianStructure) {
        let c = Arc::new(fixtures::par1());
        let cart = find_cartesian_structure(&c);
        (c, cart)
    }

    #[test]
    fn slice_identities_and_restrictions() {
        let (c, cart) = par1();
        let s = simple_slice(&c, &cart, Mode::Lax).unwrap();
        let t = &*s.total.cat;
        assert!(verify_restriction_axioms(t).passed());
        for x in t.objects() {
            let (sig, y) = s.total.objects[x];
            assert_eq!(s.total.arrows[t.id(x)], (c.id(sig), cart.product(sig, y).unwrap().pi1));
        }
        for f in t.arrows() {
            let (a, a2) = s.total.arrows[f];
            let pi1 = cart.product(s.total.objects[t.dom(f)].0, s.total.objects[t.dom(f)].1).unwrap().pi1;
            assert_eq!(s.total.arrows[t.rst(f)], (c.rst(a), c.comp(c.rst(a2), pi1)));
        }
    }

    #[test]
    fn slice_prone_lift_is_the_restricted_projection() {
        let (c, cart) = par1();
        for mode in [Mode::Strict, Mode::Lax] {
            let s = simple_slice(&c, &cart, mode).unwrap();
            assert!(s.report.flags.latent_fibration);
            let t = &*s.total.cat;
            for x in c.objects() {
                for &f in c.arrows().collect::<Vec<_>>().iter().filter(|&&f| c.cod(f) == x) {
                    for y in c.objects() {
                        let sx = cart.product(c.dom(f), y).unwrap();
                        let data = (f, c.comp(c.rst(c.comp(sx.pi0, f)), sx.pi1));
                        let (d, e) = (s.total.object(&(c.dom(f), y)).unwrap(), s.total.object(&(x, y)).unwrap());
                        let k = s.total.arrow(d, e, &data).unwrap();
                        assert!(s.report.is_prone(k), "{}", t.arr_name(k));
                    }
                }
            }
        }
    }

    #[test]
    fn products_project_prone_one_times_f() {
        let y = fixtures::i2();
        let x = Arc::new(fixtures::triv2());
        let p = projection_fibration(&y, &x).unwrap();
        assert!(p.report.flags.latent_fibration);
        for (k, &(a, _)) in p.total.arrows.iter().enumerate() {
            if y.is_identity(a) {
                assert!(p.report.is_prone(k));
            }
        }
    }

    #[test]
    fn propositions_of_triv2_is_triv2() {
        let c = Arc::new(fixtures::triv2());
        let o = propositions(&c).unwrap();
        assert_eq!(o.total.cat.n_objects(), 2);
        assert_eq!(o.total.cat.n_arrows(), 2);
    }

    #[test]
    fn terminal_presheaf_elements_are_the_base() {
        let c = Arc::new(fixtures::i2());
        let e = elements(&c, &Presheaf::terminal(&c)).unwrap();
        assert!(crate::iso::find_isomorphism(&e.total.cat, &c).is_some());
    }

    #[test]
    fn codomain_of_par1_is_a_fibration() {
        let (c, cart) = par1();
        for mode in [Mode::Strict, Mode::Lax] {
            let d = codomain(&c, mode).unwrap();
            assert!(verify_restriction_axioms(&d.total.cat).passed());
            assert!(d.report.flags.latent_fibration, "{mode}");
            let s = simple_slice(&c, &cart, mode).unwrap();
            let (f1, f0) = slice_into_codomain(&c, &cart, &s, &d).unwrap();
            let m = crate::fibration::verify_morphism(&s.report, &d.report, &f1, &f0);
            assert!(m.passed(), "{m}");
        }
    }

    #[test]
    fn cospan_without_cones_breaks_the_codomain_fibration() {
        let c = Arc::new(fixtures::cospan());
        assert!(!codomain(&c, Mode::Strict).unwrap().report.flags.latent_fibration);
    }

    #[test]
    fn assemblies_over_par1() {
        let (c, cart) = par1();
        let asm = assemblies(&RestSemifunctor::identity(c.clone()), &cart).unwrap();
        assert!(verify_restriction_axioms(&asm.total.cat).passed());
        assert!(asm.report.flags.latent_fibration);
    }

    #[test]
    fn codomain_over_par2_misses_kernel_pairs() {
        let c = Arc::new(fixtures::par2());
        let f = c.arr_by_name("{a,b}>{a}:a>a,b>a").unwrap();
        assert!(crate::latpull::latent_pullback(&c, f, f).is_none());
        for mode in [Mode::Strict, Mode::Lax] {
            let cod = codomain(&c, mode).unwrap();
            assert!(!cod.report.flags.latent_fibration);
            let missing: Vec<&str> = cod.report.missing.iter().map(|&(_, g)| c.arr_name(g)).collect();
            assert_eq!(
                missing,
                ["{a,b}>{a}:a>a,b>a", "{a,b}>{a,b}:a>a,b>a", "{a,b}>{a,b}:a>b,b>b"]
            );
        }
    }
}
