//! Restriction terminal objects and restriction products.

use std::collections::BTreeMap;

use crate::category::{ArrId, FinRestCat, ObjId};
use crate::report::Report;

/// A chosen product of two objects with its projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Product {
    pub object: ObjId,
    pub pi0: ArrId,
    pub pi1: ArrId,
}

/// Designated terminal object and products. Pairings are not stored: they
/// are determined by their equations and found by search.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CartesianStructure {
    pub terminal: Option<ObjId>,
    /// `bang[x]`, one per object when a terminal is designated.
    pub bang: Vec<ArrId>,
    pub products: BTreeMap<(ObjId, ObjId), Product>,
}

impl CartesianStructure {
    pub fn product(&self, a: ObjId, b: ObjId) -> Option<Product> {
        self.products.get(&(a, b)).copied()
    }

    /// The pairing `<a, b>` into the chosen product of the codomains: the
    /// arrow `p` with `p pi0 = \bar b a` and `p pi1 = \bar a b`.
    pub fn pair(&self, c: &FinRestCat, a: ArrId, b: ArrId) -> Option<ArrId> {
        let prod = self.product(c.cod(a), c.cod(b))?;
        pairing(c, prod, a, b).next()
    }

    /// `f x g = <pi0 f, pi1 g>`.
    pub fn times(&self, c: &FinRestCat, f: ArrId, g: ArrId) -> Option<ArrId> {
        let dom = self.product(c.dom(f), c.dom(g))?;
        self.pair(c, c.comp(dom.pi0, f), c.comp(dom.pi1, g))
    }
}

/// All arrows satisfying the pairing equations for the cone `(a, b)`.
fn pairing(c: &FinRestCat, prod: Product, a: ArrId, b: ArrId) -> impl Iterator<Item = ArrId> + '_ {
    let want0 = c.comp(c.rst(b), a);
    let want1 = c.comp(c.rst(a), b);
    c.hom(c.dom(a), prod.object)
        .iter()
        .copied()
        .filter(move |&p| c.comp(p, prod.pi0) == want0 && c.comp(p, prod.pi1) == want1)
}

fn is_terminal(c: &FinRestCat, t: ObjId) -> Option<Vec<ArrId>> {
    c.objects()
        .map(|x| {
            let hom = c.hom(x, t);
            let bang = *hom.iter().find(|&&b| c.is_total(b))?;
            hom.iter()
                .all(|&f| c.comp(c.rst(f), bang) == f)
                .then_some(bang)
        })
        .collect()
}

fn is_product(c: &FinRestCat, prod: Product) -> bool {
    let (a, b) = (c.cod(prod.pi0), c.cod(prod.pi1));
    c.is_total(prod.pi0)
        && c.is_total(prod.pi1)
        && c.objects().all(|z| {
            c.hom(z, a).iter().all(|&f| {
                c.hom(z, b)
                    .iter()
                    .all(|&g| pairing(c, prod, f, g).take(2).count() == 1)
            })
        })
}

/// Finds a terminal object and every product that exists, by search. The
/// lowest ids win, so the result is deterministic.
pub fn find_cartesian_structure(c: &FinRestCat) -> CartesianStructure {
    let (terminal, bang) = c
        .objects()
        .find_map(|t| is_terminal(c, t).map(|b| (Some(t), b)))
        .unwrap_or((None, Vec::new()));
    let mut products = BTreeMap::new();
    for a in c.objects() {
        for b in c.objects() {
            let found = c.objects().find_map(|p| {
                c.hom(p, a).iter().find_map(|&pi0| {
                    c.hom(p, b).iter().find_map(|&pi1| {
                        let prod = Product { object: p, pi0, pi1 };
                        is_product(c, prod).then_some(prod)
                    })
                })
            });
            if let Some(prod) = found {
                products.insert((a, b), prod);
            }
        }
    }
    CartesianStructure {
        terminal,
        bang,
        products,
    }
}

/// Checks the terminal law, the projections, and existence and uniqueness
/// of every pairing; also that every pair of objects has a product.
pub fn verify_cartesian_structure(c: &FinRestCat, cart: &CartesianStructure) -> Report {
    let mut report = Report::new("cartesian structure");
    let n = |f: ArrId| c.arr_name(f).to_string();

    match cart.terminal {
        None => report.fail("terminal.exists", "no terminal object designated"),
        Some(t) => {
            report.pass("terminal.exists");
            let typed = cart.bang.len() == c.n_objects()
                && c
                    .objects()
                    .all(|x| c.dom(cart.bang[x]) == x && c.cod(cart.bang[x]) == t);
            if !typed {
                report.fail("terminal.bang", "bang maps missing or mistyped");
            } else {
                let bad = c.objects().find(|&x| !c.is_total(cart.bang[x]));
                report.record("terminal.bang", bad.map(|x| n(cart.bang[x])));
                let bad = c
                    .objects()
                    .flat_map(|x| c.hom(x, t).iter().map(move |&f| (x, f)))
                    .find(|&(x, f)| c.comp(c.rst(f), cart.bang[x]) != f);
                report.record("terminal.universal", bad.map(|(_, f)| n(f)));
            }
        }
    }

    let mut typing = None;
    let mut total = None;
    let mut pairing_fail = None;
    for (&(a, b), &prod) in &cart.products {
        let (p0, p1) = (prod.pi0, prod.pi1);
        if c.dom(p0) != prod.object
            || c.dom(p1) != prod.object
            || c.cod(p0) != a
            || c.cod(p1) != b
        {
            typing.get_or_insert_with(|| format!("{} x {}", c.obj_name(a), c.obj_name(b)));
            continue;
        }
        if !c.is_total(p0) || !c.is_total(p1) {
            total.get_or_insert_with(|| format!("{} x {}", c.obj_name(a), c.obj_name(b)));
        }
        if pairing_fail.is_some() {
            continue;
        }
        'cones: for z in c.objects() {
            for &f in c.hom(z, a) {
                for &g in c.hom(z, b) {
                    let count = pairing(c, prod, f, g).take(2).count();
                    if count != 1 {
                        let what = if count == 0 { "no pairing" } else { "two pairings" };
                        pairing_fail = Some(format!("{what} for the cone ({}, {})", n(f), n(g)));
                        break 'cones;
                    }
                }
            }
        }
    }
    report.record("product.typing", typing);
    report.record("product.projections_total", total);
    report.record("product.pairing", pairing_fail);

    let missing = c
        .objects()
        .flat_map(|a| c.objects().map(move |b| (a, b)))
        .find(|k| !cart.products.contains_key(k))
        .map(|(a, b)| format!("{} x {}", c.obj_name(a), c.obj_name(b)));
    report.record("product.complete", missing);
    report
}
