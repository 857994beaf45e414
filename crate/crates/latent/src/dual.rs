//! Hyper-open maps, span restriction categories and the fibrational dual of
//! a latent hyperfibration.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::{ArrId, FinRestCat, ObjId};
use crate::error::{Error, Result};
use crate::fibration::{certify_latent_fibration, factorize, FibrationReport, SubverticalProneFactorization};
use crate::functors::RestSemifunctor;
use crate::latpull::{find_latent_pullbacks, Square};
use crate::report::Report;

/// Two classes of maps, as membership flags per arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HQSystem {
    pub h: Vec<bool>,
    pub q: Vec<bool>,
}

impl HQSystem {
    pub fn from_predicates(
        c: &FinRestCat,
        h: impl Fn(ArrId) -> bool,
        q: impl Fn(ArrId) -> bool,
    ) -> Self {
        HQSystem {
            h: c.arrows().map(&h).collect(),
            q: c.arrows().map(&q).collect(),
        }
    }
}

/// A latent pullback of `h` against `q` (both into one object) whose leg
/// opposite `h` is in H and whose leg opposite `q` is in Q. In the square,
/// `f = q`, `b = h`, `a` is the H-leg and `f_prime` the Q-leg.
pub fn hq_pullback(c: &FinRestCat, sys: &HQSystem, q: ArrId, h: ArrId) -> Option<Square> {
    find_latent_pullbacks(c, q, h)
        .into_iter()
        .find(|sq| sys.h[sq.a] && sys.q[sq.f_prime])
}

fn class_clauses(c: &FinRestCat, class: &[bool], name: &str, r: &mut Report) {
    let n = |f: ArrId| c.arr_name(f).to_string();
    let down = c
        .arrows()
        .filter(|&g| class[g])
        .flat_map(|g| c.hom(c.dom(g), c.cod(g)).iter().map(move |&f| (f, g)))
        .find(|&(f, g)| !class[f] && c.le(f, g));
    r.record(format!("{name}.downclosed"), down.map(|(f, g)| format!("{} <= {}", n(f), n(g))));
    let comp = c
        .arrows()
        .filter(|&f| class[f])
        .flat_map(|f| c.out_of(c.cod(f)).iter().map(move |&g| (f, g)))
        .find(|&(f, g)| class[g] && !class[c.comp(f, g)]);
    r.record(format!("{name}.composition"), comp.map(|(f, g)| format!("({}, {})", n(f), n(g))));
    let idem = c.arrows().find(|&f| c.is_rest_idem(f) && !class[f]);
    r.record(format!("{name}.idempotents"), idem.map(n));
    let iso = c.arrows().find(|&f| c.is_partial_iso(f) && !class[f]);
    r.record(format!("{name}.partial_isos"), iso.map(n));
}

pub fn verify_hq_system(c: &FinRestCat, sys: &HQSystem) -> Report {
    let mut r = Report::new("commuting downclosed systems");
    class_clauses(c, &sys.h, "h", &mut r);
    class_clauses(c, &sys.q, "q", &mut r);
    let mut bad = None;
    'outer: for h in c.arrows().filter(|&h| sys.h[h]) {
        for &q in c.into(c.cod(h)) {
            if sys.q[q] && hq_pullback(c, sys, q, h).is_none() {
                bad = Some(format!("({}, {})", c.arr_name(h), c.arr_name(q)));
                break 'outer;
            }
        }
    }
    r.record("commute", bad);
    r
}

/// `exists_h` as pairs `(e, exists_h(e))` for `e <= \bar h`, and the range
/// `\hat h = exists_h(\bar h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperOpenWitness {
    pub h: ArrId,
    pub exists: Vec<(ArrId, ArrId)>,
    pub range: ArrId,
}

fn below(c: &FinRestCat, x: ObjId, top: ArrId) -> Vec<ArrId> {
    c.idempotents(x)
        .into_iter()
        .filter(|&e| c.comp(e, top) == e)
        .collect()
}

/// Searches for `d` such that `e -> \bar{h e}` is an order isomorphism from
/// the idempotents below `d` onto those below `\bar h`.
pub fn is_hyper_open(c: &FinRestCat, h: ArrId) -> Option<HyperOpenWitness> {
    let source = below(c, c.dom(h), c.rst(h));
    c.idempotents(c.cod(h)).into_iter().find_map(|d| {
        let down = below(c, c.cod(h), d);
        if down.len() != source.len() {
            return None;
        }
        let pulled: Vec<ArrId> = down.iter().map(|&e| c.rst(c.comp(h, e))).collect();
        let mut sorted = pulled.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != source.len() || !sorted.iter().all(|e| source.contains(e)) {
            return None;
        }
        let reflects = down.iter().zip(&pulled).all(|(&e1, &a1)| {
            down.iter()
                .zip(&pulled)
                .all(|(&e2, &a2)| c.le(e1, e2) == c.le(a1, a2))
        });
        reflects.then(|| HyperOpenWitness {
            h,
            exists: pulled.into_iter().zip(down).collect(),
            range: d,
        })
    })
}

/// A span `dom <-h- S -q-> cod`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub h: ArrId,
    pub q: ArrId,
}

/// `Span_X(H, Q)`: the canonical (least) representative of each class and
/// its full member list.
#[derive(Debug, Clone)]
pub struct SpanCategory {
    pub base: Arc<FinRestCat>,
    pub system: HQSystem,
    pub cat: Arc<FinRestCat>,
    pub spans: Vec<Span>,
    pub members: Vec<Vec<Span>>,
    index: HashMap<Span, ArrId>,
    hat: Vec<Option<ArrId>>,
}

impl SpanCategory {
    /// The class containing `s`, if `s` is a span of the system.
    pub fn class_of(&self, s: Span) -> Option<ArrId> {
        self.index.get(&s).copied()
    }

    /// The range `\hat h` used for the restriction.
    pub fn hat(&self, h: ArrId) -> Option<ArrId> {
        self.hat[h]
    }
}

/// The equivalence of spans: a partial isomorphism `alpha` in H with
/// `alpha h' = h`, `alpha q' = q`, `alpha^-1 h = h'`, `alpha^-1 q = q'`,
/// `\bar{alpha^-1} = \bar{q'}` and `\bar alpha = \bar q`.
pub fn span_equivalence(c: &FinRestCat, sys: &HQSystem, a: Span, b: Span) -> Option<ArrId> {
    c.hom(c.dom(a.h), c.dom(b.h)).iter().copied().find(|&alpha| {
        let Some(inv) = c.partial_inverse(alpha) else {
            return false;
        };
        sys.h[alpha]
            && c.comp(alpha, b.h) == a.h
            && c.comp(alpha, b.q) == a.q
            && c.comp(inv, a.h) == b.h
            && c.comp(inv, a.q) == b.q
            && c.rst(inv) == c.rst(b.q)
            && c.rst(alpha) == c.rst(a.q)
    })
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Builds `Span_X(H, Q)` with ranges found by the hyper-open search.
pub fn span_category(x: &Arc<FinRestCat>, sys: &HQSystem) -> Result<SpanCategory> {
    let mut hat = vec![None; x.n_arrows()];
    for h in x.arrows().filter(|&h| sys.h[h]) {
        let w = is_hyper_open(x, h).ok_or_else(|| Error::NotHyperOpen(x.arr_name(h).to_string()))?;
        hat[h] = Some(w.range);
    }
    span_category_with(x, sys, hat)
}

/// Which of the admissible latent pullbacks composition uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PullbackChoice {
    #[default]
    First,
    Last,
}

/// Builds `Span_X(H, Q)` with the given ranges of the H-maps.
pub fn span_category_with(x: &Arc<FinRestCat>, sys: &HQSystem, hat: Vec<Option<ArrId>>) -> Result<SpanCategory> {
    span_category_choosing(x, sys, hat, PullbackChoice::First)
}

pub fn span_category_choosing(
    x: &Arc<FinRestCat>,
    sys: &HQSystem,
    hat: Vec<Option<ArrId>>,
    choice: PullbackChoice,
) -> Result<SpanCategory> {
    let c = &**x;
    let pick = |q, h| {
        let mut all = find_latent_pullbacks(c, q, h)
            .into_iter()
            .filter(|sq| sys.h[sq.a] && sys.q[sq.f_prime]);
        match choice {
            PullbackChoice::First => all.next(),
            PullbackChoice::Last => all.next_back(),
        }
    };
    let mut all: Vec<Span> = Vec::new();
    for apex in c.objects() {
        for &h in c.out_of(apex) {
            if !sys.h[h] {
                continue;
            }
            for &q in c.out_of(apex) {
                if sys.q[q] && c.rst(h) == c.rst(q) {
                    all.push(Span { h, q });
                }
            }
        }
    }
    all.sort_unstable_by_key(|s| (c.cod(s.h), c.cod(s.q), c.dom(s.h), s.h, s.q));
    let pos: HashMap<Span, usize> = all.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut parent: Vec<usize> = (0..all.len()).collect();
    for (i, s) in all.iter().enumerate() {
        for apex in c.objects() {
            for &alpha in c.hom(c.dom(s.h), apex) {
                if !sys.h[alpha] {
                    continue;
                }
                let Some(inv) = c.partial_inverse(alpha) else {
                    continue;
                };
                let t = Span {
                    h: c.comp(inv, s.h),
                    q: c.comp(inv, s.q),
                };
                let Some(&j) = pos.get(&t) else {
                    continue;
                };
                if span_equivalence(c, sys, *s, t).is_some() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut root_class: HashMap<usize, ArrId> = HashMap::new();
    let mut spans = Vec::new();
    let mut members: Vec<Vec<Span>> = Vec::new();
    let mut index = HashMap::new();
    for (i, &s) in all.iter().enumerate() {
        let r = find(&mut parent, i);
        let k = *root_class.entry(r).or_insert_with(|| {
            spans.push(s);
            members.push(Vec::new());
            spans.len() - 1
        });
        members[k].push(s);
        index.insert(s, k);
    }
    let names = spans
        .iter()
        .map(|s| {
            (
                format!("({},{})", c.arr_name(s.h), c.arr_name(s.q)),
                c.cod(s.h),
                c.cod(s.q),
            )
        })
        .collect();
    let identities = c
        .objects()
        .map(|o| {
            let one = c.id(o);
            index.get(&Span { h: one, q: one }).copied().ok_or_else(|| {
                Error::MalformedTable(format!("the identity span on `{}` is missing", c.obj_name(o)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pullbacks: HashMap<(ArrId, ArrId), Option<Square>> = HashMap::new();
    let cat = FinRestCat::from_fn(
        c.obj_names().to_vec(),
        names,
        identities,
        |a, b| {
            let (s, t) = (spans[a], spans[b]);
            let sq = (*pullbacks
                .entry((s.q, t.h))
                .or_insert_with(|| pick(s.q, t.h)))?;
            index.get(&Span { h: c.comp(sq.a, s.h), q: c.comp(sq.f_prime, t.q) }).copied()
        },
        |a| {
            let r = hat[spans[a].h]?;
            index.get(&Span { h: r, q: r }).copied()
        },
    )?;
    Ok(SpanCategory {
        base: x.clone(),
        system: sys.clone(),
        cat: Arc::new(cat),
        spans,
        members,
        index,
        hat,
    })
}

/// `E*` with `p*`.
#[derive(Debug, Clone)]
pub struct Dual {
    pub fib: FibrationReport,
    pub span: SpanCategory,
    pub report: FibrationReport,
}

impl Dual {
    pub fn cat(&self) -> &Arc<FinRestCat> {
        &self.span.cat
    }

    /// The class of the span `(h, q)`.
    pub fn class_of(&self, h: ArrId, q: ArrId) -> Option<ArrId> {
        self.span.class_of(Span { h, q })
    }

    /// The unique member `(v', \bar{v'})` of a subvertical class.
    pub fn vertical_rep(&self, k: ArrId) -> Option<ArrId> {
        let e = self.fib.total();
        let mut it = self.span.members[k].iter().filter(|s| s.q == e.rst(s.h) && e.dom(s.h) == self.cat().cod(k));
        let first = it.next()?;
        it.next().is_none().then_some(first.h)
    }

    /// The unique member `(\bar{c'}, c')` of a prone class.
    pub fn prone_rep(&self, k: ArrId) -> Option<ArrId> {
        let e = self.fib.total();
        let mut it = self.span.members[k].iter().filter(|s| s.h == e.rst(s.q) && e.dom(s.q) == self.cat().dom(k));
        let first = it.next()?;
        it.next().is_none().then_some(first.q)
    }
}

/// The restriction idempotent on `cod v` over `p(v)`; for a subvertical `v`
/// of a hyperfibration it is unique.
pub fn hyper_hat(fib: &FibrationReport, v: ArrId) -> Option<ArrId> {
    let e = fib.total();
    let mut it = e
        .idempotents(e.cod(v))
        .into_iter()
        .filter(|&d| fib.p.arr(d) == fib.p.arr(v));
    let d = it.next()?;
    it.next().is_none().then_some(d)
}

pub fn subvertical_prone_system(fib: &FibrationReport) -> HQSystem {
    let e = fib.total();
    HQSystem::from_predicates(e, |f| fib.p.is_subvertical(f), |f| fib.prone[f])
}

pub fn fibrational_dual(fib: &FibrationReport) -> Result<Dual> {
    fib.require_hyperfibration()?;
    let e = fib.p.source.clone();
    let sys = subvertical_prone_system(fib);
    let hat = e
        .arrows()
        .map(|v| if sys.h[v] { hyper_hat(fib, v) } else { None })
        .collect();
    let span = span_category_with(&e, &sys, hat)?;
    let arr_map = span.spans.iter().map(|s| fib.p.arr(s.q)).collect();
    let pstar = RestSemifunctor::new(span.cat.clone(), fib.p.target.clone(), fib.p.obj_map.clone(), arr_map)?;
    Ok(Dual {
        fib: fib.clone(),
        report: certify_latent_fibration(&pstar),
        span,
    })
}

/// `[(v, c)] = [(v, \bar v)] then [(\bar c, c)]`, verified.
pub fn canonical_factor_dual(d: &Dual, k: ArrId) -> Result<(ArrId, ArrId)> {
    let e = d.fib.total();
    let Span { h: v, q: c } = d.span.spans[k];
    let missing = || Error::MalformedTable(format!("`{}` does not factor", d.cat().arr_name(k)));
    let first = d.class_of(v, e.rst(v)).ok_or_else(missing)?;
    let second = d.class_of(e.rst(c), c).ok_or_else(missing)?;
    if d.cat().comp(first, second) != k {
        return Err(missing());
    }
    Ok((first, second))
}

/// The subvertical/prone factorization with `\bar c = \hat v`.
pub fn hyper_factorize(fib: &FibrationReport, f: ArrId) -> Result<SubverticalProneFactorization> {
    fib.require_hyperfibration()?;
    let fac = factorize(fib, f)?;
    let e = fib.total();
    if hyper_hat(fib, fac.v) != Some(e.rst(fac.c)) {
        return Err(Error::NotHyperconnected(format!(
            "the prone part of `{}` is not restricted to the range of its subvertical part",
            e.arr_name(f)
        )));
    }
    Ok(fac)
}

/// The characterizations of the structure of `E*`, checked class by class.
pub fn dual_checks(d: &Dual) -> Report {
    let e = d.fib.total();
    let es = &**d.cat();
    let pst = &d.report;
    let n = |k: ArrId| es.arr_name(k).to_string();
    let mut r = Report::new("fibrational dual");
    r.absorb("p*", pst.checks());
    r.record(
        "functor",
        (pst.flags.restriction_functor != d.fib.flags.restriction_functor).then(|| "p* and p disagree on identities".into()),
    );
    r.record("hyperfibration", (!pst.flags.is_hyperfibration()).then(|| pst.flags.to_string()));

    let verticals = es.arrows().find(|&k| {
        let s = d.span.spans[k];
        let sub = pst.p.is_subvertical(k);
        (sub && !e.is_partial_iso(s.q)) || sub != d.vertical_rep(k).is_some()
    });
    r.record("subverticals", verticals.map(n));
    let prones = es.arrows().find(|&k| {
        let s = d.span.spans[k];
        let prone = pst.prone[k];
        prone != e.is_partial_iso(s.h) || prone != d.prone_rep(k).is_some()
    });
    r.record("prones", prones.map(n));
    let lifts = e
        .arrows()
        .filter(|&f| d.fib.prone[f])
        .find(|&f| !d.class_of(e.rst(f), f).is_some_and(|k| pst.prone[k]));
    r.record("prone_lifts", lifts.map(|f| e.arr_name(f).to_string()));
    let isos = es
        .arrows()
        .filter(|&k| es.is_partial_iso(k) && pst.p.is_subvertical(k))
        .find(|&k| !d.vertical_rep(k).is_some_and(|v| e.is_partial_iso(v)));
    r.record("partial_isos", isos.map(n));
    let restriction = es.arrows().find(|&k| {
        let v = d.span.spans[k].h;
        let hat = d.span.hat(v);
        hat.is_none() || hat != is_hyper_open(e, v).map(|w| w.range) || d.class_of(hat.unwrap(), hat.unwrap()) != Some(es.rst(k))
    });
    r.record("restriction", restriction.map(n));
    r.record("factor", es.arrows().find(|&k| canonical_factor_dual(d, k).is_err()).map(n));

    let mut after_prone = None;
    let mut before_vertical = None;
    for k in es.arrows() {
        let Span { h: v, q: c } = d.span.spans[k];
        for &c2 in e.out_of(e.cod(c)) {
            if !d.fib.prone[c2] {
                continue;
            }
            let cc = e.comp(c, c2);
            let lhs = d.class_of(e.rst(c2), c2).map(|m| es.comp(k, m));
            let rhs = d.class_of(e.comp(e.rst(cc), v), cc);
            if lhs.is_none() || lhs != rhs {
                after_prone.get_or_insert(format!("{} then {}", n(k), e.arr_name(c2)));
            }
        }
        for &w in e.out_of(es.dom(k)) {
            if !d.fib.p.is_subvertical(w) {
                continue;
            }
            let vw = e.comp(v, w);
            let lhs = d.class_of(w, e.rst(w)).map(|m| es.comp(m, k));
            let rhs = d.class_of(vw, e.comp(e.rst(vw), c));
            if lhs.is_none() || lhs != rhs {
                before_vertical.get_or_insert(format!("{} then {}", e.arr_name(w), n(k)));
            }
        }
    }
    r.record("compose.prone", after_prone);
    r.record("compose.subvertical", before_vertical);
    r
}

/// From `F: X -> Y*` to `X* -> Y`: `[(v, c)]` goes to `F_v(v) F_c(c)`.
pub fn transpose_from_dual(xs: &Dual, ys: &Dual, f: &RestSemifunctor) -> Result<RestSemifunctor> {
    let y = ys.fib.total();
    let arr_map = xs
        .span
        .spans
        .iter()
        .map(|s| {
            let v = ys.vertical_rep(f.arr(s.h));
            let c = ys.prone_rep(f.arr(s.q));
            match (v, c) {
                (Some(v), Some(c)) => Ok(y.comp(v, c)),
                _ => Err(Error::Mismatch(format!(
                    "the image of `({}, {})` has no vertical/prone representatives",
                    xs.fib.total().arr_name(s.h),
                    xs.fib.total().arr_name(s.q)
                ))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    RestSemifunctor::new(xs.cat().clone(), ys.fib.p.source.clone(), f.obj_map.clone(), arr_map)
}

/// From `G: X* -> Y` to `X -> Y*`: `f = v c` goes to the class of
/// `(G[(v, \bar v)], G[(\bar c, c)])`.
pub fn transpose_to_dual(xs: &Dual, ys: &Dual, g: &RestSemifunctor) -> Result<RestSemifunctor> {
    let x = xs.fib.total();
    let arr_map = x
        .arrows()
        .map(|f| {
            let fac = hyper_factorize(&xs.fib, f)?;
            let missing = || Error::Mismatch(format!("`{}` has no transpose", x.arr_name(f)));
            let sv = xs.class_of(fac.v, x.rst(fac.v)).ok_or_else(missing)?;
            let sc = xs.class_of(x.rst(fac.c), fac.c).ok_or_else(missing)?;
            ys.class_of(g.arr(sv), g.arr(sc)).ok_or_else(missing)
        })
        .collect::<Result<Vec<_>>>()?;
    RestSemifunctor::new(xs.fib.p.source.clone(), ys.cat().clone(), g.obj_map.clone(), arr_map)
}

/// `eta: E -> E**` and `epsilon: E** -> E`, transposed from the identity on
/// `E*`.
#[derive(Debug, Clone)]
pub struct DoubleDual {
    pub dual: Dual,
    pub double: Dual,
    pub eta: RestSemifunctor,
    pub epsilon: RestSemifunctor,
}

impl DoubleDual {
    pub fn report(&self) -> Report {
        let mut r = Report::new("double dual");
        let e = self.dual.fib.total();
        let ee = &**self.double.cat();
        let eta_eps = e
            .arrows()
            .find(|&f| self.epsilon.arr(self.eta.arr(f)) != f)
            .map(|f| e.arr_name(f).to_string());
        let eps_eta = ee
            .arrows()
            .find(|&k| self.eta.arr(self.epsilon.arr(k)) != k)
            .map(|k| ee.arr_name(k).to_string());
        r.absorb("eta", crate::functors::verify_functor(&self.eta));
        r.absorb("epsilon", crate::functors::verify_functor(&self.epsilon));
        r.record("eta_then_epsilon", eta_eps);
        r.record("epsilon_then_eta", eps_eta);
        let id = RestSemifunctor::identity(self.dual.fib.p.target.clone());
        r.absorb(
            "eta",
            crate::fibration::verify_morphism(&self.dual.fib, &self.double.report, &self.eta, &id),
        );
        r.absorb(
            "epsilon",
            crate::fibration::verify_morphism(&self.double.report, &self.dual.fib, &self.epsilon, &id),
        );
        r
    }
}

pub fn double_dual(fib: &FibrationReport) -> Result<DoubleDual> {
    let dual = fibrational_dual(fib)?;
    let double = fibrational_dual(&dual.report)?;
    let id = RestSemifunctor::identity(dual.cat().clone());
    let eta = transpose_to_dual(&dual, &double, &id)?;
    let epsilon = transpose_from_dual(&double, &dual, &id)?;
    Ok(DoubleDual {
        dual,
        double,
        eta,
        epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{identity_fibration, simple_slice, Mode};
    use crate::fixtures;
    use crate::iso::find_isomorphism;

    fn slice() -> FibrationReport {
        let c = Arc::new(fixtures::par1());
        let cart = crate::cartesian::find_cartesian_structure(&c);
        simple_slice(&c, &cart, Mode::Strict).unwrap().report
    }

    #[test]
    fn idempotents_and_partial_isos_are_hyper_open() {
        let c = fixtures::i2();
        for f in c.arrows() {
            if c.is_rest_idem(f) {
                assert_eq!(is_hyper_open(&c, f).unwrap().range, f);
            }
            if let Some(inv) = c.partial_inverse(f) {
                assert_eq!(is_hyper_open(&c, f).unwrap().range, c.rst(inv));
            }
        }
    }

    #[test]
    fn partial_isos_form_a_system() {
        let c = Arc::new(fixtures::i2());
        let sys = HQSystem::from_predicates(&c, |f| c.is_partial_iso(f), |f| c.is_partial_iso(f));
        assert!(verify_hq_system(&c, &sys).passed());
        let s = span_category(&c, &sys).unwrap();
        assert!(crate::restriction::verify_restriction_axioms(&s.cat).passed());
    }

    #[test]
    fn identity_dual_is_the_category() {
        let c = Arc::new(fixtures::i2());
        let d = fibrational_dual(&identity_fibration(&c)).unwrap();
        assert!(find_isomorphism(d.cat(), &c).is_some());
        assert!(dual_checks(&d).passed(), "{}", dual_checks(&d));
    }

    #[test]
    fn slice_dual() {
        let fib = slice();
        let sys = subvertical_prone_system(&fib);
        let r = verify_hq_system(fib.total(), &sys);
        // partial isomorphisms over non-idempotents are not subvertical
        assert!(r.failures().map(|c| c.id.as_str()).eq(["h.partial_isos"]), "{r}");
        let d = fibrational_dual(&fib).unwrap();
        assert!(crate::restriction::verify_restriction_axioms(d.cat()).passed());
        let checks = dual_checks(&d);
        assert!(checks.passed(), "{checks}");
    }

    #[test]
    fn double_dual_is_isomorphic() {
        for fib in [slice(), identity_fibration(&Arc::new(fixtures::par1()))] {
            let dd = double_dual(&fib).unwrap();
            let r = dd.report();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn composition_ignores_the_pullback_choice() {
        for fib in [slice(), crate::table1::build_row(0).unwrap()] {
            let e = fib.p.source.clone();
            let sys = subvertical_prone_system(&fib);
            let hat: Vec<_> = e.arrows().map(|v| sys.h[v].then(|| hyper_hat(&fib, v)).flatten()).collect();
            let first = span_category_choosing(&e, &sys, hat.clone(), PullbackChoice::First).unwrap();
            let last = span_category_choosing(&e, &sys, hat, PullbackChoice::Last).unwrap();
            assert!(first.cat.same_tables(&last.cat));
        }
    }

    #[test]
    fn hyper_factorizations() {
        let fib = slice();
        for f in fib.total().arrows() {
            hyper_factorize(&fib, f).unwrap();
        }
    }

    #[test]
    fn non_hyperconnected_has_no_dual() {
        let c = Arc::new(fixtures::par1());
        let cart = crate::cartesian::find_cartesian_structure(&c);
        let lax = simple_slice(&c, &cart, Mode::Lax).unwrap().report;
        assert!(matches!(fibrational_dual(&lax), Err(Error::NotHyperconnected(_))));
    }

    #[test]
    fn every_hyperfibration_row_dualizes() {
        for (i, (name, row)) in crate::table1::ROWS.iter().enumerate() {
            if !row.hyper {
                continue;
            }
            let fib = crate::table1::build_row(i).unwrap();
            let d = fibrational_dual(&fib).unwrap();
            let r = dual_checks(&d);
            assert!(r.passed(), "{name}: {r}");
            let r = double_dual(&fib).unwrap().report();
            assert!(r.passed(), "{name}: {r}");
        }
    }
}
