//! M-categories, partial map categories and M-fibrations.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::{ArrId, FinRestCat, ObjId};
use crate::error::{Error, Result};
use crate::fibration::{certify_latent_fibration, is_cartesian, total_part, FibrationReport};
use crate::functors::{verify_functor, RestSemifunctor};
use crate::iso::find_isomorphism_coloured;
use crate::report::Report;
use crate::restriction::{first_unsplit, is_precise_triangle, total_subcategory};

/// A pullback of `m: B -> C` along `f: A -> C`: `m_prime: P -> A` and
/// `f_prime: P -> B` with `m_prime f = f_prime m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pullback {
    pub m_prime: ArrId,
    pub f_prime: ArrId,
}

/// A category (trivial restriction) with a distinguished class of monics
/// and a chosen pullback of each M-map along each map into its codomain.
#[derive(Debug, Clone)]
pub struct MCategory {
    pub cat: Arc<FinRestCat>,
    pub m: Vec<bool>,
    /// `(m, f) -> pullback of m along f`.
    pub pullbacks: BTreeMap<(ArrId, ArrId), Pullback>,
}

pub fn is_monic(c: &FinRestCat, m: ArrId) -> bool {
    c.objects().all(|z| {
        let hom = c.hom(z, c.dom(m));
        hom.iter().all(|&a| hom.iter().all(|&b| a == b || c.comp(a, m) != c.comp(b, m)))
    })
}

pub fn is_pullback(c: &FinRestCat, f: ArrId, m: ArrId, pb: Pullback) -> bool {
    if c.dom(pb.m_prime) != c.dom(pb.f_prime)
        || c.cod(pb.m_prime) != c.dom(f)
        || c.cod(pb.f_prime) != c.dom(m)
        || c.comp(pb.m_prime, f) != c.comp(pb.f_prime, m)
    {
        return false;
    }
    let apex = c.dom(pb.m_prime);
    c.objects().all(|z| {
        c.hom(z, c.dom(f)).iter().all(|&a| {
            c.hom(z, c.dom(m)).iter().all(|&b| {
                c.comp(a, f) != c.comp(b, m)
                    || c.hom(z, apex)
                        .iter()
                        .filter(|&&k| c.comp(k, pb.m_prime) == a && c.comp(k, pb.f_prime) == b)
                        .take(2)
                        .count()
                        == 1
            })
        })
    })
}

/// Every pullback of `m` along `f`, in id order.
pub fn all_pullbacks(c: &FinRestCat, f: ArrId, m: ArrId) -> Vec<Pullback> {
    let mut out = Vec::new();
    for apex in c.objects() {
        for &m_prime in c.hom(apex, c.dom(f)) {
            for &f_prime in c.hom(apex, c.dom(m)) {
                let pb = Pullback { m_prime, f_prime };
                if is_pullback(c, f, m, pb) {
                    out.push(pb);
                }
            }
        }
    }
    out
}

impl MCategory {
    /// Searches the pullbacks, taking the first candidate in id order.
    pub fn new(cat: Arc<FinRestCat>, m: Vec<bool>) -> Result<Self> {
        Self::with_choice(cat, m, |_| 0)
    }

    /// Like [`MCategory::new`], with `choose` picking among the candidate
    /// pullbacks (in id order) whose M-leg lies in M.
    pub fn with_choice(cat: Arc<FinRestCat>, m: Vec<bool>, choose: impl Fn(usize) -> usize) -> Result<Self> {
        if m.len() != cat.n_arrows() {
            return Err(Error::NotMCategory("one M flag per arrow is required".into()));
        }
        let mut pullbacks = BTreeMap::new();
        for n in cat.arrows().filter(|&n| m[n]) {
            for &f in FinRestCat::into(&cat, cat.cod(n)) {
                let cands: Vec<Pullback> = all_pullbacks(&cat, f, n)
                    .into_iter()
                    .filter(|pb| m[pb.m_prime])
                    .collect();
                if cands.is_empty() {
                    return Err(Error::NotMCategory(format!(
                        "no pullback of `{}` along `{}`",
                        cat.arr_name(n),
                        cat.arr_name(f)
                    )));
                }
                pullbacks.insert((n, f), cands[choose(cands.len()) % cands.len()]);
            }
        }
        Ok(MCategory { cat, m, pullbacks })
    }

    /// All maps of `c` satisfying `keep` are M; pullbacks searched.
    pub fn from_predicate(c: Arc<FinRestCat>, keep: impl Fn(&FinRestCat, ArrId) -> bool) -> Result<Self> {
        let m = c.arrows().map(|f| keep(&c, f)).collect();
        Self::new(c, m)
    }

    pub fn m_arrows(&self) -> impl Iterator<Item = ArrId> + '_ {
        self.cat.arrows().filter(|&f| self.m[f])
    }

    pub fn pullback(&self, m: ArrId, f: ArrId) -> Pullback {
        self.pullbacks[&(m, f)]
    }

    fn colours(&self) -> Vec<u32> {
        self.m.iter().map(|&b| b as u32).collect()
    }
}

pub fn verify_mcategory(mc: &MCategory) -> Report {
    let c = &*mc.cat;
    let n = |f: ArrId| c.arr_name(f).to_string();
    let mut r = Report::new("M-category");
    r.record("trivial_restriction", c.arrows().find(|&f| !c.is_total(f)).map(n));
    r.record("monic", mc.m_arrows().find(|&m| !is_monic(c, m)).map(n));
    let isos = c.arrows().find(|&f| c.inverse(f).is_some() && !mc.m[f]);
    r.record("isomorphisms", isos.map(n));
    let comp = mc
        .m_arrows()
        .flat_map(|a| c.out_of(c.cod(a)).iter().map(move |&b| (a, b)))
        .find(|&(a, b)| mc.m[b] && !mc.m[c.comp(a, b)]);
    r.record("composition", comp.map(|(a, b)| format!("({}, {})", n(a), n(b))));
    let mut pb = None;
    for m in mc.m_arrows() {
        for &f in c.into(c.cod(m)) {
            let ok = mc
                .pullbacks
                .get(&(m, f))
                .is_some_and(|&p| mc.m[p.m_prime] && is_pullback(c, f, m, p));
            if !ok {
                pb.get_or_insert(format!("{} along {}", n(m), n(f)));
            }
        }
    }
    r.record("pullbacks", pb);
    r
}

/// A representative `(m, f)` of a partial map: `m: X' -> X` in M and
/// `f: X' -> Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanRep {
    pub m: ArrId,
    pub f: ArrId,
}

/// `Par(C, M)` with the canonical representative of each arrow.
#[derive(Debug, Clone)]
pub struct Par {
    pub mc: MCategory,
    pub cat: Arc<FinRestCat>,
    pub spans: Vec<SpanRep>,
}

/// An isomorphism `alpha` with `alpha m2 = m1` and `alpha f2 = f1`.
pub fn span_iso(c: &FinRestCat, a: SpanRep, b: SpanRep) -> Option<ArrId> {
    if c.cod(a.m) != c.cod(b.m) || c.cod(a.f) != c.cod(b.f) {
        return None;
    }
    c.hom(c.dom(a.m), c.dom(b.m))
        .iter()
        .copied()
        .find(|&al| c.inverse(al).is_some() && c.comp(al, b.m) == a.m && c.comp(al, b.f) == a.f)
}

impl Par {
    /// The arrow of `Par` represented by `s`.
    pub fn class_of(&self, s: SpanRep) -> Option<ArrId> {
        let c = &*self.mc.cat;
        self.cat
            .hom(c.cod(s.m), c.cod(s.f))
            .iter()
            .copied()
            .find(|&a| span_iso(c, self.spans[a], s).is_some())
    }
}

pub fn par(mc: &MCategory) -> Result<Par> {
    let c = &*mc.cat;
    let mut spans: Vec<SpanRep> = Vec::new();
    let mut hom: BTreeMap<(ObjId, ObjId), Vec<ArrId>> = BTreeMap::new();
    for x in c.objects() {
        for y in c.objects() {
            let mut reps: Vec<SpanRep> = Vec::new();
            let mut all: Vec<(ObjId, SpanRep)> = c
                .into(x)
                .iter()
                .filter(|&&m| mc.m[m])
                .flat_map(|&m| c.hom(c.dom(m), y).iter().map(move |&f| (c.dom(m), SpanRep { m, f })))
                .collect();
            all.sort_unstable();
            for (_, s) in all {
                if !reps.iter().any(|&r| span_iso(c, r, s).is_some()) {
                    reps.push(s);
                }
            }
            let ids = hom.entry((x, y)).or_default();
            for s in reps {
                ids.push(spans.len());
                spans.push(s);
            }
        }
    }
    let class = |s: SpanRep| -> Option<ArrId> {
        hom[&(c.cod(s.m), c.cod(s.f))]
            .iter()
            .copied()
            .find(|&a| span_iso(c, spans[a], s).is_some())
    };
    let arrows = spans
        .iter()
        .map(|s| {
            let (x, y) = (c.cod(s.m), c.cod(s.f));
            (format!("({},{})", c.arr_name(s.m), c.arr_name(s.f)), x, y)
        })
        .collect();
    let identities = c
        .objects()
        .map(|x| {
            let one = c.id(x);
            class(SpanRep { m: one, f: one })
                .ok_or_else(|| Error::NotMCategory(format!("identity of `{}` is not in M", c.obj_name(x))))
        })
        .collect::<Result<Vec<_>>>()?;
    let cat = FinRestCat::from_fn(
        c.obj_names().to_vec(),
        arrows,
        identities,
        |a, b| {
            let (s, t) = (spans[a], spans[b]);
            let pb = mc.pullbacks.get(&(t.m, s.f))?;
            class(SpanRep {
                m: c.comp(pb.m_prime, s.m),
                f: c.comp(pb.f_prime, t.f),
            })
        },
        |a| class(SpanRep { m: spans[a].m, f: spans[a].m }),
    )?;
    Ok(Par {
        mc: mc.clone(),
        cat: Arc::new(cat),
        spans,
    })
}

/// `(Total(E), Monic(E))` for an r-split restriction category, with the
/// map from its arrows back into `E`.
pub fn total_monic(e: &FinRestCat) -> Result<(MCategory, Vec<ArrId>)> {
    if let Some(d) = first_unsplit(e) {
        return Err(Error::NotRSplit(format!("`{}` does not split", e.arr_name(d))));
    }
    let (t, map) = total_subcategory(e);
    let m = map
        .iter()
        .map(|&f| e.partial_inverse(f).is_some())
        .collect();
    Ok((MCategory::new(Arc::new(t), m)?, map))
}

/// `Par(total_monic(E))` is isomorphic to `E`.
pub fn par_total_round_trip(e: &FinRestCat) -> Result<bool> {
    let (mc, _) = total_monic(e)?;
    let p = par(&mc)?;
    Ok(crate::iso::find_isomorphism(&p.cat, e).is_some())
}

/// `total_monic(Par(MC))` is isomorphic to `MC`, M-maps to M-maps.
pub fn total_par_round_trip(mc: &MCategory) -> Result<bool> {
    let p = par(mc)?;
    let (back, _) = total_monic(&p.cat)?;
    Ok(find_isomorphism_coloured(&back.cat, &mc.cat, &back.colours(), &mc.colours()).is_some())
}

/// Decides whether the triangle `k; right = diag` in `Par` is precise
/// through spans: with `k = (m, f)`, `right = (n, g)`, `diag = (m', f')`,
/// some `h: X'' -> Y'` has `h g = f'` and `(m, f) ~ (m', h n)`.
pub fn precise_triangle_criterion(p: &Par, k: ArrId, right: ArrId, diag: ArrId) -> bool {
    let c = &*p.mc.cat;
    let (SpanRep { m, f }, SpanRep { m: n, f: g }, SpanRep { m: m2, f: f2 }) =
        (p.spans[k], p.spans[right], p.spans[diag]);
    if c.cod(f) != c.cod(n) || c.cod(m) != c.cod(m2) || c.cod(g) != c.cod(f2) {
        return false;
    }
    c.hom(c.dom(m2), c.dom(n)).iter().any(|&h| {
        c.comp(h, g) == f2 && span_iso(c, SpanRep { m, f }, SpanRep { m: m2, f: c.comp(h, n) }).is_some()
    })
}

/// The core decider on `Par`, for comparison.
pub fn precise_in_par(p: &Par, k: ArrId, right: ArrId, diag: ArrId) -> bool {
    is_precise_triangle(&p.cat, k, right, diag).unwrap_or(false)
}

/// A functor of M-categories.
#[derive(Debug, Clone)]
pub struct MFunctor {
    pub source: MCategory,
    pub target: MCategory,
    pub q: RestSemifunctor,
}

impl MFunctor {
    pub fn new(source: MCategory, target: MCategory, obj_map: Vec<ObjId>, arr_map: Vec<ArrId>) -> Result<Self> {
        let q = RestSemifunctor::new(source.cat.clone(), target.cat.clone(), obj_map, arr_map)?;
        Ok(MFunctor { source, target, q })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MFlags {
    pub functor: bool,
    pub preserves_m: bool,
    pub preserves_pullbacks: bool,
    pub ordinary_fibration: bool,
    pub m_plentiful: bool,
    pub admissible_m: bool,
    pub separated_m: bool,
}

impl MFlags {
    pub fn is_m_fibration(&self) -> bool {
        self.ordinary_fibration && self.m_plentiful
    }
}

pub fn verify_mfibration(q: &MFunctor) -> MFlags {
    let (e, b) = (&*q.source.cat, &*q.target.cat);
    let p = &q.q;
    let cart: Vec<bool> = e.arrows().map(|f| is_cartesian(p, f)).collect();
    let preserves_m = q.source.m_arrows().all(|m| q.target.m[p.arr(m)]);
    let preserves_pullbacks = q.source.pullbacks.iter().all(|(&(m, f), pb)| {
        let image = Pullback {
            m_prime: p.arr(pb.m_prime),
            f_prime: p.arr(pb.f_prime),
        };
        is_pullback(b, p.arr(f), p.arr(m), image)
    });
    let ordinary_fibration = e.objects().all(|x| {
        b.into(p.obj(x))
            .iter()
            .all(|&f| e.into(x).iter().any(|&k| cart[k] && p.arr(k) == f))
    });
    let m_plentiful = e.objects().all(|x| {
        b.out_of(p.obj(x))
            .iter()
            .filter(|&&m| q.target.m[m])
            .all(|&m| e.out_of(x).iter().any(|&n| q.source.m[n] && p.arr(n) == m))
    });
    let admissible_m = e
        .arrows()
        .filter(|&f| cart[f] && q.target.m[p.arr(f)])
        .all(|f| q.source.m[f]);
    let separated_m = q.source.m_arrows().all(|m| cart[m]);
    MFlags {
        functor: verify_functor(p).passed(),
        preserves_m,
        preserves_pullbacks,
        ordinary_fibration,
        m_plentiful,
        admissible_m,
        separated_m,
    }
}

/// `Par(q): Par(E, M_E) -> Par(B, M_B)`, certified.
#[derive(Debug, Clone)]
pub struct ParFibration {
    pub source: Par,
    pub target: Par,
    pub report: FibrationReport,
}

pub fn par_of_fibration(q: &MFunctor) -> Result<ParFibration> {
    let source = par(&q.source)?;
    let target = par(&q.target)?;
    let obj_map = q.q.obj_map.clone();
    let mut arr_map = Vec::with_capacity(source.cat.n_arrows());
    for s in &source.spans {
        let image = SpanRep {
            m: q.q.arr(s.m),
            f: q.q.arr(s.f),
        };
        arr_map.push(target.class_of(image).ok_or_else(|| {
            Error::NotMCategory("the functor does not preserve M".into())
        })?);
    }
    let p = RestSemifunctor::new(source.cat.clone(), target.cat.clone(), obj_map, arr_map)?;
    Ok(ParFibration {
        report: certify_latent_fibration(&p),
        source,
        target,
    })
}

/// `Total(p)` between `(Total(E), Monic(E))` and `(Total(B), Monic(B))`.
pub fn total_mfunctor(p: &RestSemifunctor) -> Result<MFunctor> {
    let tp = total_part(p)?;
    let (se, _) = total_monic(&p.source)?;
    let (sb, _) = total_monic(&p.target)?;
    MFunctor::new(se, sb, tp.obj_map, tp.arr_map)
}

/// The strict arrow category of an ordinary category with its codomain
/// functor. Returns the objects (arrows of `c`) and the squares `(f, f')`,
/// `f` along the bottom.
#[allow(clippy::type_complexity)]
pub fn arrow_category(c: &Arc<FinRestCat>) -> Result<(Arc<FinRestCat>, Vec<ArrId>, Vec<(ArrId, ArrId)>, RestSemifunctor)> {
    let cod = crate::constructions::codomain(c, crate::constructions::Mode::Strict)?;
    Ok((
        cod.total.cat.clone(),
        cod.total.objects.clone(),
        cod.total.arrows.clone(),
        cod.report.p.clone(),
    ))
}

/// Which squares are M in the arrow-category examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareClass {
    /// Both components monic.
    Monic,
    /// Pullback squares over a monic.
    Pullback,
}

/// The codomain functor `C^-> -> C` as an M-functor, `C` carrying all its
/// monics.
pub fn codomain_mfibration(c: &Arc<FinRestCat>, class: SquareClass) -> Result<MFunctor> {
    let (arr, objects, squares, q) = arrow_category(c)?;
    let base = MCategory::from_predicate(c.clone(), is_monic)?;
    let m: Vec<bool> = arr
        .arrows()
        .map(|k| {
            let (f, f2) = squares[k];
            let (a, b) = (objects[arr.dom(k)], objects[arr.cod(k)]);
            match class {
                SquareClass::Monic => is_monic(c, f) && is_monic(c, f2),
                SquareClass::Pullback => {
                    is_monic(c, f) && is_pullback(c, f, b, Pullback { m_prime: a, f_prime: f2 })
                }
            }
        })
        .collect();
    let total = MCategory::new(arr, m)?;
    MFunctor::new(total, base, q.obj_map.clone(), q.arr_map.clone())
}

/// The identity on `c` with M-maps `keep`.
pub fn identity_mfibration(c: &Arc<FinRestCat>, keep: impl Fn(&FinRestCat, ArrId) -> bool) -> Result<MFunctor> {
    let mc = MCategory::from_predicate(c.clone(), keep)?;
    let id = RestSemifunctor::identity(c.clone());
    MFunctor::new(mc.clone(), mc, id.obj_map, id.arr_map)
}

pub fn injections(c: &FinRestCat, f: ArrId) -> bool {
    is_monic(c, f)
}

pub fn isos(c: &FinRestCat, f: ArrId) -> bool {
    c.inverse(f).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sets(n: usize) -> Arc<FinRestCat> {
        Arc::new(if n == 1 { fixtures::sets1().cat } else { fixtures::sets2().cat })
    }

    #[test]
    fn sets_with_injections_is_an_m_category() {
        for n in [1, 2] {
            let mc = MCategory::from_predicate(sets(n), injections).unwrap();
            assert!(verify_mcategory(&mc).passed());
            let mc = MCategory::from_predicate(sets(n), isos).unwrap();
            assert!(verify_mcategory(&mc).passed());
        }
    }

    #[test]
    fn par_of_sets_with_injections_is_partial_maps() {
        let mc = MCategory::from_predicate(sets(2), injections).unwrap();
        let p = par(&mc).unwrap();
        assert!(crate::iso::find_isomorphism(&p.cat, &fixtures::par2()).is_some());
        let p1 = par(&MCategory::from_predicate(sets(1), injections).unwrap()).unwrap();
        assert!(crate::iso::find_isomorphism(&p1.cat, &fixtures::par1()).is_some());
    }

    #[test]
    fn par_with_isos_is_the_category() {
        let mc = MCategory::from_predicate(sets(2), isos).unwrap();
        let p = par(&mc).unwrap();
        assert!(crate::iso::find_isomorphism(&p.cat, &mc.cat).is_some());
    }

    #[test]
    fn round_trips() {
        assert!(par_total_round_trip(&fixtures::par2()).unwrap());
        let mc = MCategory::from_predicate(sets(2), injections).unwrap();
        assert!(total_par_round_trip(&mc).unwrap());
        assert!(matches!(total_monic(&fixtures::i2()), Err(Error::NotRSplit(_))));
        let s = crate::split::split_restriction_idempotents(&Arc::new(fixtures::i2()));
        assert!(par_total_round_trip(&s.cat).unwrap());
    }

    #[test]
    fn codomain_examples() {
        let c = sets(1);
        let q = codomain_mfibration(&c, SquareClass::Monic).unwrap();
        let f = verify_mfibration(&q);
        assert!(f.functor && f.preserves_m && f.preserves_pullbacks);
        assert!(f.is_m_fibration() && f.admissible_m && !f.separated_m);
        let q = codomain_mfibration(&c, SquareClass::Pullback).unwrap();
        let f = verify_mfibration(&q);
        assert!(f.is_m_fibration() && f.admissible_m && f.separated_m);
    }

    #[test]
    fn flags_transfer_to_par() {
        let c = sets(1);
        for class in [SquareClass::Monic, SquareClass::Pullback] {
            let q = codomain_mfibration(&c, class).unwrap();
            let f = verify_mfibration(&q);
            let pf = par_of_fibration(&q).unwrap();
            let g = pf.report.flags;
            assert!(g.latent_fibration && g.r_split);
            assert_eq!(g.admissible, f.admissible_m);
            assert_eq!(g.separated, f.separated_m);
            assert_eq!(g.hyperconnected, f.admissible_m && f.separated_m);
        }
    }

    #[test]
    fn codomain_needs_all_pullbacks() {
        // the kernel pair of {a,b} -> {a} has four elements
        let q = codomain_mfibration(&sets(2), SquareClass::Monic).unwrap();
        let f = verify_mfibration(&q);
        assert!(f.m_plentiful && !f.ordinary_fibration);
        assert!(!par_of_fibration(&q).unwrap().report.flags.latent_fibration);
    }

    #[test]
    fn precise_triangles_through_spans() {
        let mc = MCategory::from_predicate(sets(2), injections).unwrap();
        let p = par(&mc).unwrap();
        let c = &*p.cat;
        for k in c.arrows() {
            for &g in c.out_of(c.cod(k)) {
                for &d in c.hom(c.dom(k), c.cod(g)) {
                    assert_eq!(precise_triangle_criterion(&p, k, g, d), precise_in_par(&p, k, g, d));
                }
            }
        }
    }

    #[test]
    fn par_ignores_the_choice_of_pullbacks() {
        let c = sets(2);
        let first = par(&MCategory::from_predicate(c.clone(), injections).unwrap()).unwrap();
        let m = c.arrows().map(|f| injections(&c, f)).collect();
        let last = MCategory::with_choice(c, m, |n| n - 1).unwrap();
        assert!(verify_mcategory(&last).passed());
        let last = par(&last).unwrap();
        assert!(first.cat.same_tables(&last.cat));
    }

    #[test]
    fn total_of_an_r_split_fibration() {
        let c = Arc::new(fixtures::par1());
        let fib = crate::constructions::codomain(&c, crate::constructions::Mode::Strict).unwrap().report;
        assert!(fib.flags.r_split);
        let q = total_mfunctor(&fib.p).unwrap();
        let f = verify_mfibration(&q);
        assert!(f.is_m_fibration());
        assert_eq!(f.admissible_m, fib.flags.admissible);
        assert_eq!(f.separated_m, fib.flags.separated);
    }
}
