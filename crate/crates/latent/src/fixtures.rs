//! Small categories used by the tests, the guide and `latent emit-fixture`.
//!
//! The partial-map fixtures are generated from explicit functions between
//! finite sets, so the tables are correct by construction and the per-arrow
//! functions double as an oracle.

use std::collections::HashMap;

use crate::category::{ArrId, FinRestCat};

/// Which functions between the sets become arrows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Partial,
    PartialInjective,
    Total,
    TotalInjective,
}

impl MapKind {
    fn allows(self, f: &[Option<usize>]) -> bool {
        let total = f.iter().all(Option::is_some);
        let injective = {
            let mut seen: Vec<usize> = f.iter().flatten().copied().collect();
            let n = seen.len();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == n
        };
        match self {
            MapKind::Partial => true,
            MapKind::PartialInjective => injective,
            MapKind::Total => total,
            MapKind::TotalInjective => total && injective,
        }
    }
}

/// A category of functions between explicit finite sets, with each arrow's
/// underlying function kept alongside.
#[derive(Debug, Clone)]
pub struct SetMaps {
    pub cat: FinRestCat,
    pub sets: Vec<Vec<String>>,
    /// `funcs[f][i]` is the image of element `i` of `dom f`, if defined.
    pub funcs: Vec<Vec<Option<usize>>>,
}

impl SetMaps {
    /// Builds the category on `sets` (name, elements). Restriction is the
    /// partial identity on the domain of definition, so for total kinds it is
    /// trivial.
    pub fn new(sets: &[(&str, &[&str])], kind: MapKind) -> Self {
        Self::named(sets, kind, |dom, cod, f, elems| {
            let body: Vec<String> = f
                .iter()
                .enumerate()
                .filter_map(|(i, y)| y.map(|y| format!("{}>{}", elems[dom][i], elems[cod][y])))
                .collect();
            format!("{}>{}:{}", sets[dom].0, sets[cod].0, body.join(","))
        })
    }

    fn named(
        sets: &[(&str, &[&str])],
        kind: MapKind,
        mut name: impl FnMut(usize, usize, &[Option<usize>], &[Vec<String>]) -> String,
    ) -> Self {
        let elems: Vec<Vec<String>> = sets
            .iter()
            .map(|(_, es)| es.iter().map(|e| e.to_string()).collect())
            .collect();
        let mut arrows = Vec::new();
        let mut funcs = Vec::new();
        let mut index = HashMap::new();
        for d in 0..sets.len() {
            for c in 0..sets.len() {
                for f in all_functions(elems[d].len(), elems[c].len()) {
                    if !kind.allows(&f) {
                        continue;
                    }
                    index.insert((d, c, f.clone()), arrows.len());
                    arrows.push((name(d, c, &f, &elems), d, c));
                    funcs.push(f);
                }
            }
        }
        let identities = (0..sets.len())
            .map(|x| index[&(x, x, (0..elems[x].len()).map(Some).collect::<Vec<_>>())])
            .collect();
        let cat = FinRestCat::from_fn(
            sets.iter().map(|(n, _)| n.to_string()).collect(),
            arrows.clone(),
            identities,
            |f, g| {
                let h: Vec<Option<usize>> = funcs[f]
                    .iter()
                    .map(|x| x.and_then(|x| funcs[g][x]))
                    .collect();
                index.get(&(arrows[f].1, arrows[g].2, h)).copied()
            },
            |f| {
                let r: Vec<Option<usize>> = funcs[f]
                    .iter()
                    .enumerate()
                    .map(|(i, y)| y.map(|_| i))
                    .collect();
                let d = arrows[f].1;
                index.get(&(d, d, r)).copied()
            },
        )
        .expect("function tables are well formed");
        SetMaps {
            cat,
            sets: elems,
            funcs,
        }
    }

    /// The arrow whose underlying function is `f`.
    pub fn arrow(&self, dom: usize, cod: usize, f: &[Option<usize>]) -> Option<ArrId> {
        self.cat
            .hom(dom, cod)
            .iter()
            .copied()
            .find(|&a| self.funcs[a] == f)
    }
}

/// All partial functions `0..n -> 0..m`, in lexicographic order with
/// "undefined" first.
fn all_functions(n: usize, m: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                std::iter::once(None)
                    .chain((0..m).map(Some))
                    .map(move |y| {
                        let mut v = prefix.clone();
                        v.push(y);
                        v
                    })
            })
            .collect();
    }
    out
}

const PAR1_SETS: &[(&str, &[&str])] = &[("{}", &[]), ("{*}", &["*"])];
const PAR2_SETS: &[(&str, &[&str])] = &[("{}", &[]), ("{a}", &["a"]), ("{a,b}", &["a", "b"])];

/// Two objects, identities only, trivial restriction.
pub fn triv2() -> FinRestCat {
    discrete(&["A", "B"])
}

/// One object, identity only.
pub fn point() -> FinRestCat {
    discrete(&["*"])
}

/// A discrete category on the given objects.
pub fn discrete(objects: &[&str]) -> FinRestCat {
    FinRestCat::from_fn(
        objects.iter().map(|o| o.to_string()).collect(),
        objects.iter().enumerate().map(|(i, o)| (format!("1{o}"), i, i)).collect(),
        (0..objects.len()).collect(),
        |f, g| (f == g).then_some(f),
        Some,
    )
    .expect("discrete category")
}

/// Partial injections on a two-element set: one object, seven arrows, named
/// `1`, `0`, `swap` and by their graphs (`a>b`, ...).
pub fn i2() -> FinRestCat {
    i2_maps().cat
}

pub fn i2_maps() -> SetMaps {
    SetMaps::named(&[("*", &["a", "b"])], MapKind::PartialInjective, |_, _, f, e| {
        match f {
            [None, None] => "0".into(),
            [Some(0), Some(1)] => "1".into(),
            [Some(1), Some(0)] => "swap".into(),
            _ => f
                .iter()
                .enumerate()
                .filter_map(|(i, y)| y.map(|y| format!("{}>{}", e[0][i], e[0][y])))
                .collect(),
        }
    })
}

/// Partial maps between sets of size at most one.
pub fn par1() -> FinRestCat {
    par1_maps().cat
}

pub fn par1_maps() -> SetMaps {
    SetMaps::new(PAR1_SETS, MapKind::Partial)
}

/// Partial maps between `{}`, `{a}` and `{a,b}`.
pub fn par2() -> FinRestCat {
    par2_maps().cat
}

pub fn par2_maps() -> SetMaps {
    SetMaps::new(PAR2_SETS, MapKind::Partial)
}

/// Total maps between sets of size at most one.
pub fn sets1() -> SetMaps {
    SetMaps::new(PAR1_SETS, MapKind::Total)
}

/// Total maps between `{}`, `{a}` and `{a,b}`.
pub fn sets2() -> SetMaps {
    SetMaps::new(PAR2_SETS, MapKind::Total)
}

/// Two objects and one arrow `x: 0 -> 1`, trivial restriction.
pub fn triv2_cross() -> FinRestCat {
    FinRestCat::from_fn(
        vec!["0".into(), "1".into()],
        vec![("10".into(), 0, 0), ("11".into(), 1, 1), ("x".into(), 0, 1)],
        vec![0, 1],
        |f, g| match (f, g) {
            (0, g) => Some(g),
            (f, 1) => Some(f),
            _ => None,
        },
        |f| Some(if f == 1 { 1 } else { 0 }),
    )
    .expect("cross arrow")
}

/// A cospan `f: A -> C <- B: g` with nothing else: it has no cone at all, so
/// no latent pullback.
pub fn cospan() -> FinRestCat {
    FinRestCat::from_fn(
        vec!["A".into(), "B".into(), "C".into()],
        vec![
            ("1A".into(), 0, 0),
            ("1B".into(), 1, 1),
            ("1C".into(), 2, 2),
            ("f".into(), 0, 2),
            ("g".into(), 1, 2),
        ],
        vec![0, 1, 2],
        |f, g| match (f, g) {
            (0, g) | (1, g) => Some(g),
            (f, 2) => Some(f),
            _ => None,
        },
        |f| Some([0, 1, 2, 0, 1][f]),
    )
    .expect("cospan")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(triv2().n_arrows(), 2);
        assert_eq!(i2().n_arrows(), 7);
        assert_eq!(par1().n_arrows(), 5);
        let p = par2();
        assert_eq!(p.n_objects(), 3);
        assert_eq!(p.hom(2, 2).len(), 9);
        assert_eq!(p.n_arrows(), 23);
    }

    #[test]
    fn names_are_readable() {
        let c = i2();
        for n in ["0", "1", "swap", "a>b", "b>a", "a>a", "b>b"] {
            c.arr_by_name(n).unwrap();
        }
        par2().arr_by_name("{a,b}>{a}:b>a").unwrap();
    }
}
