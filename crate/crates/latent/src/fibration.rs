//! Prone arrows and latent fibrations.
//!
//! Everything here is decided by enumeration over the finite tables of the
//! total category `E` and the base `B` of a semifunctor `p: E -> B`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::category::{ArrId, FinRestCat, ObjId};
use crate::error::{Error, Result};
use crate::functors::{compose_semifunctors, pullback_semifunctors, same_category, RestSemifunctor};
use crate::report::Report;
use crate::restriction::{is_r_split, splittings};
use crate::split::{split_restriction_idempotents, Splitting};

/// All `k: dom g -> dom f` over `h` with `k f = g` precise.
pub fn precise_lifts(p: &RestSemifunctor, f: ArrId, g: ArrId, h: ArrId) -> Vec<ArrId> {
    let e = &*p.source;
    e.hom(e.dom(g), e.dom(f))
        .iter()
        .copied()
        .filter(|&k| p.arr(k) == h && e.comp(k, f) == g && e.rst(k) == e.rst(g))
        .collect()
}

/// The lift of `h` through the prone `f` against `g`, when it exists and is
/// unique.
pub fn unique_lift(p: &RestSemifunctor, f: ArrId, g: ArrId, h: ArrId) -> Option<ArrId> {
    match precise_lifts(p, f, g, h)[..] {
        [k] => Some(k),
        _ => None,
    }
}

/// Decides proneness. For a fixed `g` every precise lift `k` of `g`
/// through `f` sits over a valid base triangle, so it suffices to count the
/// lifts per base arrow and compare with the set of valid `h`.
pub fn is_prone(p: &RestSemifunctor, f: ArrId) -> bool {
    prone_witness(p, f).is_none()
}

/// The first `(g, h)` whose lift is missing or not unique.
pub fn prone_witness(p: &RestSemifunctor, f: ArrId) -> Option<(ArrId, ArrId)> {
    let (e, b) = (&*p.source, &*p.target);
    let (x_src, x) = (e.dom(f), e.cod(f));
    let pf = p.arr(f);
    let mut over: BTreeMap<ArrId, usize> = BTreeMap::new();
    for &g in e.into(x) {
        let y = e.dom(g);
        over.clear();
        for &k in e.hom(y, x_src) {
            if e.comp(k, f) == g && e.rst(k) == e.rst(g) {
                *over.entry(p.arr(k)).or_default() += 1;
            }
        }
        let pg = p.arr(g);
        let rpg = b.rst(pg);
        for &h in b.hom(p.obj(y), p.obj(x_src)) {
            if b.comp(h, pf) == pg && b.rst(h) == rpg && over.get(&h) != Some(&1) {
                return Some((g, h));
            }
        }
    }
    None
}

/// `prone[f]` for every arrow of the total category.
pub fn prone_table(p: &RestSemifunctor) -> Vec<bool> {
    p.source.arrows().map(|f| is_prone(p, f)).collect()
}

/// The original definition: for every lax triangle `p(g) <= h p(f)` the
/// candidate liftings `k` (with `g <= k f` and `p(k) <= h`) have a least
/// element. Only meaningful for restriction functors.
pub fn is_prone_old(p: &RestSemifunctor, f: ArrId) -> Result<bool> {
    if !p.preserves_identities() {
        return Err(Error::NotAFunctor(
            "the original definition of prone needs identities preserved".into(),
        ));
    }
    let (e, b) = (&*p.source, &*p.target);
    let (x_src, x) = (e.dom(f), e.cod(f));
    let pf = p.arr(f);
    for &g in e.into(x) {
        let y = e.dom(g);
        let pg = p.arr(g);
        for &h in b.hom(p.obj(y), p.obj(x_src)) {
            if !b.le(pg, b.comp(h, pf)) {
                continue;
            }
            let cands: Vec<ArrId> = e
                .hom(y, x_src)
                .iter()
                .copied()
                .filter(|&k| e.le(g, e.comp(k, f)) && b.le(p.arr(k), h))
                .collect();
            let least = cands.iter().any(|&k0| cands.iter().all(|&k| e.le(k0, k)));
            if !least {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The classification of a semifunctor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    pub latent_fibration: bool,
    pub restriction_functor: bool,
    pub admissible: bool,
    pub separated: bool,
    pub hyperconnected: bool,
    pub well_fibred: bool,
    pub r_split: bool,
}

impl Flags {
    pub fn is_hyperfibration(&self) -> bool {
        self.latent_fibration && self.hyperconnected
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "latent fibration: {}, restriction functor: {}, admissible: {}, separated: {}, \
             hyperconnected: {}, well-fibred: {}, r-split: {}",
            yes(self.latent_fibration),
            yes(self.restriction_functor),
            yes(self.admissible),
            yes(self.separated),
            yes(self.hyperconnected),
            yes(self.well_fibred),
            yes(self.r_split)
        )
    }
}

/// The result of certifying a semifunctor as a latent fibration.
#[derive(Debug, Clone)]
pub struct FibrationReport {
    pub p: RestSemifunctor,
    /// `prone[f]` for each arrow of `E`.
    pub prone: Vec<bool>,
    /// `(X, f) -> f*_X`, the lowest-id prone arrow into `X` over `f`, for
    /// every base `f` into `p(X)` with `f = f p(1_X)` that has one.
    pub cleavage: BTreeMap<(ObjId, ArrId), ArrId>,
    /// The `(X, f)` with no prone lift.
    pub missing: Vec<(ObjId, ArrId)>,
    /// `(X, e) -> e*`, the prone restriction idempotent on `X` over `e`.
    pub admissible_section: BTreeMap<(ObjId, ArrId), ArrId>,
    pub flags: Flags,
    /// Every restriction idempotent of `E` is prone.
    pub idempotents_prone: bool,
    /// Every partial isomorphism of `E` is prone.
    pub partial_isos_prone: bool,
}

impl FibrationReport {
    pub fn total(&self) -> &FinRestCat {
        &self.p.source
    }

    pub fn base(&self) -> &FinRestCat {
        &self.p.target
    }

    pub fn is_prone(&self, f: ArrId) -> bool {
        self.prone[f]
    }

    pub fn prone_arrows(&self) -> impl Iterator<Item = ArrId> + '_ {
        self.prone.iter().enumerate().filter(|(_, &b)| b).map(|(f, _)| f)
    }

    /// The chosen prone lift of `f` at `x`.
    pub fn lift(&self, x: ObjId, f: ArrId) -> Result<ArrId> {
        self.cleavage.get(&(x, f)).copied().ok_or_else(|| Error::MissingLift {
            object: self.total().obj_name(x).to_string(),
            base: self.base().arr_name(f).to_string(),
        })
    }

    pub fn require_fibration(&self) -> Result<()> {
        match self.missing.first() {
            None => Ok(()),
            Some(&(x, f)) => Err(Error::NotAFibration(format!(
                "no prone lift of `{}` at `{}`",
                self.base().arr_name(f),
                self.total().obj_name(x)
            ))),
        }
    }

    pub fn require_admissible(&self) -> Result<()> {
        self.require_fibration()?;
        if self.flags.admissible {
            Ok(())
        } else {
            Err(Error::NotAdmissible(self.admissible_witness().unwrap_or_default()))
        }
    }

    pub fn require_hyperfibration(&self) -> Result<()> {
        self.require_fibration()?;
        if self.flags.hyperconnected {
            Ok(())
        } else {
            Err(Error::NotHyperconnected(
                "p is not a bijection on restriction idempotents".into(),
            ))
        }
    }

    fn admissible_witness(&self) -> Option<String> {
        let (e, b) = (self.total(), self.base());
        admissible_targets(&self.p).find_map(|(x, d)| {
            (!self.admissible_section.contains_key(&(x, d)))
                .then(|| format!("no prone idempotent over `{}` at `{}`", b.arr_name(d), e.obj_name(x)))
        })
    }

    /// One clause per structural claim: the cleavage is prone and over its
    /// base, the fibration condition, and the two equivalences relating the
    /// flags.
    pub fn checks(&self) -> Report {
        let mut r = Report::new("latent fibration");
        let (e, b) = (self.total(), self.base());
        let bad = self
            .cleavage
            .iter()
            .find(|(&(x, f), &k)| !self.prone[k] || self.p.arr(k) != f || e.cod(k) != x);
        r.record("cleavage", bad.map(|(_, &k)| e.arr_name(k).to_string()));
        r.record(
            "lifts",
            self.missing
                .first()
                .map(|&(x, f)| format!("`{}` at `{}`", b.arr_name(f), e.obj_name(x))),
        );
        let sep = [self.flags.separated, self.idempotents_prone, self.partial_isos_prone];
        r.record(
            "equiv.separated",
            (!(sep.iter().all(|&s| s) || sep.iter().all(|&s| !s)))
                .then(|| format!("separated / idempotents prone / partial isos prone = {sep:?}")),
        );
        let hyper = self.flags.hyperconnected;
        let both = self.flags.separated && self.flags.admissible;
        r.record(
            "equiv.hyperconnected",
            (hyper != both).then(|| format!("hyperconnected {hyper}, separated and admissible {both}")),
        );
        r
    }
}

/// Pairs `(X, e)` with `e` a base restriction idempotent on `p(X)` with
/// `e p(1_X) = e`.
fn admissible_targets(p: &RestSemifunctor) -> impl Iterator<Item = (ObjId, ArrId)> + '_ {
    let (e, b) = (&*p.source, &*p.target);
    e.objects().flat_map(move |x| {
        let one = p.arr(e.id(x));
        b.idempotents(p.obj(x))
            .into_iter()
            .filter(move |&d| b.comp(d, one) == d)
            .map(move |d| (x, d))
    })
}

/// `p` is injective on each `O(X)`.
pub fn is_separated(p: &RestSemifunctor) -> bool {
    let e = &*p.source;
    e.objects().all(|x| {
        let mut seen: Vec<ArrId> = e.idempotents(x).into_iter().map(|d| p.arr(d)).collect();
        let n = seen.len();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == n
    })
}

/// `p` restricted to `O(X)` is a bijection onto `{d in O(pX) : d p(1_X) = d}`.
pub fn is_hyperconnected(p: &RestSemifunctor) -> bool {
    let (e, b) = (&*p.source, &*p.target);
    e.objects().all(|x| {
        let one = p.arr(e.id(x));
        let mut image: Vec<ArrId> = e.idempotents(x).into_iter().map(|d| p.arr(d)).collect();
        image.sort_unstable();
        let mut want: Vec<ArrId> = b
            .idempotents(p.obj(x))
            .into_iter()
            .filter(|&d| b.comp(d, one) == d)
            .collect();
        want.sort_unstable();
        image == want
    })
}

/// A restriction idempotent in a fibre `p^{-1}(B)` that splits in `E` also
/// splits in the fibre.
pub fn is_well_fibred(p: &RestSemifunctor) -> bool {
    let (e, b) = (&*p.source, &*p.target);
    e.arrows().filter(|&d| e.is_rest_idem(d)).all(|d| {
        let one = b.id(p.obj(e.dom(d)));
        if p.arr(d) != one {
            return true;
        }
        let mut split = splittings(e, d).peekable();
        split.peek().is_none() || split.any(|(r, m)| p.arr(r) == one && p.arr(m) == one)
    })
}

pub fn certify_latent_fibration(p: &RestSemifunctor) -> FibrationReport {
    let (e, b) = (&*p.source, &*p.target);
    let prone = prone_table(p);

    let mut cleavage = BTreeMap::new();
    let mut missing = Vec::new();
    for x in e.objects() {
        let mut best: BTreeMap<ArrId, ArrId> = BTreeMap::new();
        for &k in e.into(x) {
            if prone[k] {
                best.entry(p.arr(k)).and_modify(|v| *v = k.min(*v)).or_insert(k);
            }
        }
        let one = p.arr(e.id(x));
        for &f in b.into(p.obj(x)) {
            if b.comp(f, one) != f {
                continue;
            }
            match best.get(&f) {
                Some(&k) => {
                    cleavage.insert((x, f), k);
                }
                None => missing.push((x, f)),
            }
        }
    }

    let mut admissible_section = BTreeMap::new();
    for (x, d) in admissible_targets(p) {
        if let Some(&k) = e
            .idempotents(x)
            .iter()
            .find(|&&k| prone[k] && p.arr(k) == d)
        {
            admissible_section.insert((x, d), k);
        }
    }
    let admissible = admissible_targets(p).all(|t| admissible_section.contains_key(&t));

    let restriction_functor = p.preserves_identities();
    let well_fibred = is_well_fibred(p);
    let flags = Flags {
        latent_fibration: missing.is_empty(),
        restriction_functor,
        admissible,
        separated: is_separated(p),
        hyperconnected: is_hyperconnected(p),
        well_fibred,
        r_split: restriction_functor && well_fibred && is_r_split(e) && is_r_split(b),
    };
    FibrationReport {
        idempotents_prone: e.arrows().filter(|&d| e.is_rest_idem(d)).all(|d| prone[d]),
        partial_isos_prone: e.arrows().filter(|&f| e.is_partial_iso(f)).all(|f| prone[f]),
        p: p.clone(),
        prone,
        cleavage,
        missing,
        admissible_section,
        flags,
    }
}

pub fn classify(p: &RestSemifunctor) -> Flags {
    certify_latent_fibration(p).flags
}

/// The mediating partial isomorphism `alpha: dom f -> dom f2` between two
/// arrows over the same base arrow with a common codomain: `alpha f2 = f`
/// and `alpha^-1 f = f2` precisely, with `p(alpha) = \bar{p f}`.
pub fn mediating_partial_iso(p: &RestSemifunctor, f: ArrId, f2: ArrId) -> Option<ArrId> {
    let (e, b) = (&*p.source, &*p.target);
    if e.cod(f) != e.cod(f2) || p.arr(f) != p.arr(f2) {
        return None;
    }
    let base = b.rst(p.arr(f));
    e.hom(e.dom(f), e.dom(f2)).iter().copied().find(|&a| {
        let Some(inv) = e.partial_inverse(a) else {
            return false;
        };
        p.arr(a) == base
            && e.comp(a, f2) == f
            && e.rst(a) == e.rst(f)
            && e.comp(inv, f) == f2
            && e.rst(inv) == e.rst(f2)
    })
}

/// A factorization `f = v c` with `v` subvertical, `c` prone, the triangle
/// precise and `\bar{p(c)} = p(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubverticalProneFactorization {
    pub f: ArrId,
    pub v: ArrId,
    pub c: ArrId,
}

/// Takes `c` from the cleavage over `p(f)` and `v` as the lift of
/// `\bar{p(f)}`.
pub fn factorize(fib: &FibrationReport, f: ArrId) -> Result<SubverticalProneFactorization> {
    let (e, b) = (fib.total(), fib.base());
    let p = &fib.p;
    let c = fib
        .lift(e.cod(f), p.arr(f))
        .map_err(|err| Error::NotAFibration(err.to_string()))?;
    let v = unique_lift(p, c, f, b.rst(p.arr(f))).ok_or_else(|| {
        Error::NotAFibration(format!("`{}` has no subvertical part", e.arr_name(f)))
    })?;
    Ok(SubverticalProneFactorization { f, v, c })
}

/// Every subvertical/prone factorization of `f`, found by enumeration.
pub fn all_factorizations(fib: &FibrationReport, f: ArrId) -> Vec<SubverticalProneFactorization> {
    let (e, b) = (fib.total(), fib.base());
    let p = &fib.p;
    let mut out = Vec::new();
    for &c in e.into(e.cod(f)) {
        if !fib.prone[c] {
            continue;
        }
        for &v in e.hom(e.dom(f), e.dom(c)) {
            if e.comp(v, c) == f
                && e.rst(v) == e.rst(f)
                && b.is_rest_idem(p.arr(v))
                && b.rst(p.arr(c)) == p.arr(v)
            {
                out.push(SubverticalProneFactorization { f, v, c });
            }
        }
    }
    out
}

/// The subvertical partial isomorphism `alpha` with `alpha c2 = c1` and
/// `v1 alpha = v2`, relating two factorizations of one arrow.
pub fn mediate_factorizations(
    fib: &FibrationReport,
    a: &SubverticalProneFactorization,
    z: &SubverticalProneFactorization,
) -> Option<ArrId> {
    let e = fib.total();
    let alpha = mediating_partial_iso(&fib.p, a.c, z.c)?;
    (e.comp(a.v, alpha) == z.v && fib.base().is_rest_idem(fib.p.arr(alpha))).then_some(alpha)
}

/// Certifies `q` then `p` from scratch.
pub fn certify_composite(q: &RestSemifunctor, p: &RestSemifunctor) -> Result<FibrationReport> {
    Ok(certify_latent_fibration(&compose_semifunctors(q, p)?))
}

/// The pullback of `p` along `f`, with the projection `p0: W -> X`
/// certified from scratch.
#[derive(Debug, Clone)]
pub struct PulledBack {
    pub w: Arc<FinRestCat>,
    pub p0: RestSemifunctor,
    pub p1: RestSemifunctor,
    pub report: FibrationReport,
}

pub fn certify_pullback(p: &RestSemifunctor, f: &RestSemifunctor) -> Result<PulledBack> {
    let (w, p0, p1) = pullback_semifunctors(p, f)?;
    let report = certify_latent_fibration(&p0);
    Ok(PulledBack { w, p0, p1, report })
}

/// A morphism of latent fibrations from `p` to `q`: `F1 q = p F0` and `F1`
/// preserves prone arrows.
pub fn verify_morphism(
    p: &FibrationReport,
    q: &FibrationReport,
    f1: &RestSemifunctor,
    f0: &RestSemifunctor,
) -> Report {
    let mut r = Report::new("morphism of latent fibrations");
    let shape = same_category(&f1.source, &p.p.source)
        && same_category(&f1.target, &q.p.source)
        && same_category(&f0.source, &p.p.target)
        && same_category(&f0.target, &q.p.target);
    if !shape {
        r.fail("shape", "the functors do not connect the two fibrations");
        return r;
    }
    let e = p.total();
    let bad_obj = e.objects().find(|&x| q.p.obj(f1.obj(x)) != f0.obj(p.p.obj(x)));
    let bad_arr = e.arrows().find(|&a| q.p.arr(f1.arr(a)) != f0.arr(p.p.arr(a)));
    r.record(
        "commutes",
        bad_obj
            .map(|x| e.obj_name(x).to_string())
            .or_else(|| bad_arr.map(|a| e.arr_name(a).to_string())),
    );
    let bad = e.arrows().find(|&a| p.prone[a] && !q.prone[f1.arr(a)]);
    r.record("preserves_prone", bad.map(|a| e.arr_name(a).to_string()));
    r
}

/// Classical Cartesian arrow for an ordinary functor: each `g` into the
/// codomain and `h` with `h p(f) = p(g)` has exactly one `k` over `h` with
/// `k f = g`.
pub fn is_cartesian(p: &RestSemifunctor, f: ArrId) -> bool {
    let (e, b) = (&*p.source, &*p.target);
    let pf = p.arr(f);
    e.into(e.cod(f)).iter().all(|&g| {
        let y = e.dom(g);
        b.hom(p.obj(y), p.obj(e.dom(f))).iter().all(|&h| {
            b.comp(h, pf) != p.arr(g)
                || e.hom(y, e.dom(f))
                    .iter()
                    .filter(|&&k| p.arr(k) == h && e.comp(k, f) == g)
                    .take(2)
                    .count()
                    == 1
        })
    })
}

/// An ordinary fibration: every base arrow into `p(X)` has a Cartesian lift.
pub fn is_classical_fibration(p: &RestSemifunctor) -> bool {
    let (e, b) = (&*p.source, &*p.target);
    let cart: Vec<bool> = e.arrows().map(|f| is_cartesian(p, f)).collect();
    e.objects().all(|x| {
        b.into(p.obj(x))
            .iter()
            .all(|&f| e.into(x).iter().any(|&k| cart[k] && p.arr(k) == f))
    })
}

/// `Total(p): Total(E) -> Total(B)`, for an identity-preserving `p`.
pub fn total_part(p: &RestSemifunctor) -> Result<RestSemifunctor> {
    if !p.preserves_identities() {
        return Err(Error::NotAFunctor("Total(p) needs a restriction functor".into()));
    }
    let (te, emap) = crate::restriction::total_subcategory(&p.source);
    let (tb, bmap) = crate::restriction::total_subcategory(&p.target);
    let mut back = vec![usize::MAX; p.target.n_arrows()];
    for (i, &g) in bmap.iter().enumerate() {
        back[g] = i;
    }
    let arr_map = emap.iter().map(|&f| back[p.arr(f)]).collect();
    RestSemifunctor::new(Arc::new(te), Arc::new(tb), p.obj_map.clone(), arr_map)
}

/// `\hat E`: the maps `f` with `\bar{f e}` prone for every prone restriction
/// idempotent `e` on the codomain, with the inclusion and `\hat p`.
#[derive(Debug, Clone)]
pub struct Hat {
    pub cat: Arc<FinRestCat>,
    pub inclusion: RestSemifunctor,
    pub p: RestSemifunctor,
}

pub fn hat_fibration(fib: &FibrationReport) -> Result<Hat> {
    fib.require_admissible()?;
    let e = fib.total();
    let prone_idems: Vec<Vec<ArrId>> = e
        .objects()
        .map(|x| e.idempotents(x).into_iter().filter(|&d| fib.prone[d]).collect())
        .collect();
    let objs: Vec<ObjId> = e.objects().collect();
    let arrs: Vec<ArrId> = e
        .arrows()
        .filter(|&f| prone_idems[e.cod(f)].iter().all(|&d| fib.prone[e.rst(e.comp(f, d))]))
        .collect();
    let (cat, _, arrs) = e.subcategory(&objs, &arrs)?;
    let cat = Arc::new(cat);
    let inclusion = RestSemifunctor::new(cat.clone(), fib.p.source.clone(), objs, arrs)?;
    let p = compose_semifunctors(&inclusion, &fib.p)?;
    Ok(Hat { cat, inclusion, p })
}

/// `Split(p): Split_r(E) -> Split_r(B)`, `(X, e) -> (pX, pe)`.
#[derive(Debug, Clone)]
pub struct SplitFibration {
    pub total: Splitting,
    pub base: Splitting,
    pub p: RestSemifunctor,
}

pub fn split_fibration(fib: &FibrationReport) -> Result<SplitFibration> {
    fib.require_admissible()?;
    split_semifunctor(&fib.p)
}

/// The splitting of any semifunctor (no fibration claim).
pub fn split_semifunctor(p: &RestSemifunctor) -> Result<SplitFibration> {
    let total = split_restriction_idempotents(&p.source);
    let base = split_restriction_idempotents(&p.target);
    let se = &*total.cat;
    let mut obj_map = Vec::with_capacity(se.n_objects());
    for &(x, d) in &total.objects {
        let o = base
            .object(p.obj(x), p.arr(d))
            .ok_or_else(|| Error::Mismatch("p does not send idempotents to idempotents".into()))?;
        obj_map.push(o);
    }
    let mut arr_map = Vec::with_capacity(se.n_arrows());
    for a in se.arrows() {
        let g = p.arr(total.forget.arr(a));
        let b = base
            .arrow(obj_map[se.dom(a)], obj_map[se.cod(a)], g)
            .ok_or_else(|| Error::Mismatch(format!("no split arrow over `{}`", p.target.arr_name(g))))?;
        arr_map.push(b);
    }
    let p = RestSemifunctor::new(total.cat.clone(), base.cat.clone(), obj_map, arr_map)?;
    Ok(SplitFibration { total, base, p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn identity(c: FinRestCat) -> RestSemifunctor {
        RestSemifunctor::identity(Arc::new(c))
    }

    #[test]
    fn identity_fibration_of_i2_is_hyper() {
        let fib = certify_latent_fibration(&identity(fixtures::i2()));
        assert!(fib.flags.latent_fibration);
        assert!(fib.flags.is_hyperfibration());
        assert!(fib.prone.iter().all(|&b| b));
        assert!(fib.checks().passed());
    }

    #[test]
    fn constant_functor_misses_the_cross_arrow() {
        let target = Arc::new(fixtures::triv2_cross());
        let source = Arc::new(fixtures::point());
        let y = target.obj_by_name("1").unwrap();
        let p = RestSemifunctor::new(source, target.clone(), vec![y], vec![target.id(y)]).unwrap();
        let fib = certify_latent_fibration(&p);
        assert!(!fib.flags.latent_fibration);
        assert_eq!(fib.missing, vec![(0, target.arr_by_name("x").unwrap())]);
        assert!(fib.require_fibration().is_err());
    }

    #[test]
    fn splitting_projection_is_a_hyperfibration() {
        let s = split_restriction_idempotents(&Arc::new(fixtures::i2()));
        let fib = certify_latent_fibration(&s.forget);
        assert!(fib.flags.latent_fibration);
        assert!(!fib.flags.restriction_functor);
        assert!(fib.flags.is_hyperfibration());
        assert!(is_prone_old(&s.forget, 0).is_err());
    }

    #[test]
    fn factorization_of_identity_arrows() {
        let fib = certify_latent_fibration(&identity(fixtures::par1()));
        for f in fib.total().arrows() {
            let fac = factorize(&fib, f).unwrap();
            for other in all_factorizations(&fib, f) {
                assert!(mediate_factorizations(&fib, &fac, &other).is_some());
            }
        }
    }

    #[test]
    fn mediating_iso_of_equal_prones_is_the_restriction() {
        let p = identity(fixtures::i2());
        let f = p.source.arr_by_name("a>b").unwrap();
        assert_eq!(mediating_partial_iso(&p, f, f), Some(p.source.rst(f)));
    }
}
