//! JSON file formats and the built-in fixture registry.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartesian::{find_cartesian_structure, CartesianStructure, Product};
use crate::category::{ArrId, FinRestCat, ObjId};
use crate::constructions::Presheaf;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::functors::RestSemifunctor;
use crate::mcat::{MCategory, Pullback};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDecl {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductDecl {
    pub left: String,
    pub right: String,
    pub object: String,
    pub pi0: String,
    pub pi1: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartesianDecl {
    pub terminal: String,
    pub bang: BTreeMap<String, String>,
    pub products: Vec<ProductDecl>,
}

/// A finite restriction category: objects, arrows, identities, the full
/// composition table as `[f, g, fg]` triples and the restriction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
    pub identities: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
    pub restriction: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartesian: Option<CartesianDecl>,
}

fn field(field: &str, message: impl Into<String>) -> Error {
    Error::Field {
        field: field.into(),
        message: message.into(),
    }
}

fn lookup<T: Copy>(map: &HashMap<&str, T>, name: &str, what: &str) -> Result<T> {
    map.get(name)
        .copied()
        .ok_or_else(|| field(what, format!("unknown name `{name}`")))
}

impl CategoryFile {
    pub fn from_category(c: &FinRestCat, cart: Option<&CartesianStructure>) -> Self {
        let a = |f: ArrId| c.arr_name(f).to_string();
        let o = |x: ObjId| c.obj_name(x).to_string();
        let mut compose = Vec::new();
        for f in c.arrows() {
            for &g in c.out_of(c.cod(f)) {
                compose.push([a(f), a(g), a(c.comp(f, g))]);
            }
        }
        let cartesian = cart.and_then(|cart| {
            let t = cart.terminal?;
            Some(CartesianDecl {
                terminal: o(t),
                bang: c.objects().map(|x| (o(x), a(cart.bang[x]))).collect(),
                products: cart
                    .products
                    .iter()
                    .map(|(&(l, r), p)| ProductDecl {
                        left: o(l),
                        right: o(r),
                        object: o(p.object),
                        pi0: a(p.pi0),
                        pi1: a(p.pi1),
                    })
                    .collect(),
            })
        });
        CategoryFile {
            objects: c.obj_names().to_vec(),
            arrows: c
                .arrows()
                .map(|f| ArrowDecl {
                    name: a(f),
                    dom: o(c.dom(f)),
                    cod: o(c.cod(f)),
                })
                .collect(),
            identities: c.objects().map(|x| (o(x), a(c.id(x)))).collect(),
            compose,
            restriction: c.arrows().map(|f| (a(f), a(c.rst(f)))).collect(),
            cartesian,
        }
    }

    pub fn to_category(&self) -> Result<(FinRestCat, Option<CartesianStructure>)> {
        let objs: HashMap<&str, ObjId> = self.objects.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let arrs: HashMap<&str, ArrId> = self.arrows.iter().enumerate().map(|(i, d)| (d.name.as_str(), i)).collect();
        let arrows = self
            .arrows
            .iter()
            .map(|d| Ok((d.name.clone(), lookup(&objs, &d.dom, "arrows")?, lookup(&objs, &d.cod, "arrows")?)))
            .collect::<Result<Vec<_>>>()?;
        let identities = self
            .objects
            .iter()
            .map(|o| {
                let name = self
                    .identities
                    .get(o)
                    .ok_or_else(|| field("identities", format!("no identity for `{o}`")))?;
                lookup(&arrs, name, "identities")
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = HashMap::with_capacity(self.compose.len());
        for [f, g, fg] in &self.compose {
            let (f, g, fg) = (lookup(&arrs, f, "compose")?, lookup(&arrs, g, "compose")?, lookup(&arrs, fg, "compose")?);
            if arrows[f].2 != arrows[g].1 {
                return Err(field(
                    "compose",
                    format!("`{}` and `{}` are not composable", arrows[f].0, arrows[g].0),
                ));
            }
            if table.insert((f, g), fg).is_some_and(|old| old != fg) {
                return Err(field(
                    "compose",
                    format!("two composites for `{}` then `{}`", arrows[f].0, arrows[g].0),
                ));
            }
        }
        let mut rest = vec![None; arrows.len()];
        for (f, r) in &self.restriction {
            rest[lookup(&arrs, f, "restriction")?] = Some(lookup(&arrs, r, "restriction")?);
        }
        let c = FinRestCat::from_fn(
            self.objects.clone(),
            arrows,
            identities,
            |f, g| table.get(&(f, g)).copied(),
            |f| rest[f],
        )?;
        let cart = match &self.cartesian {
            None => None,
            Some(decl) => {
                let terminal = lookup(&objs, &decl.terminal, "cartesian.terminal")?;
                let bang = self
                    .objects
                    .iter()
                    .map(|o| {
                        let name = decl
                            .bang
                            .get(o)
                            .ok_or_else(|| field("cartesian.bang", format!("no map from `{o}`")))?;
                        lookup(&arrs, name, "cartesian.bang")
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut products = BTreeMap::new();
                for p in &decl.products {
                    let f = "cartesian.products";
                    products.insert(
                        (lookup(&objs, &p.left, f)?, lookup(&objs, &p.right, f)?),
                        Product {
                            object: lookup(&objs, &p.object, f)?,
                            pi0: lookup(&arrs, &p.pi0, f)?,
                            pi1: lookup(&arrs, &p.pi1, f)?,
                        },
                    );
                }
                Some(CartesianStructure {
                    terminal: Some(terminal),
                    bang,
                    products,
                })
            }
        };
        Ok((c, cart))
    }
}

/// A category given inline or as a path relative to the referring file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategoryRef {
    Path(String),
    Embedded(Box<CategoryFile>),
}

/// A semifunctor by name: `objects` and `arrows` map source names to
/// target names. A fibration bundle is a functor file whose source is the
/// total category and whose target is the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<CategoryRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<CategoryRef>,
    pub objects: BTreeMap<String, String>,
    pub arrows: BTreeMap<String, String>,
}

/// A loaded category with its optional Cartesian block.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub cat: Arc<FinRestCat>,
    pub cartesian: Option<CartesianStructure>,
}

impl FunctorFile {
    /// Names only; the categories are left out.
    pub fn names_of(f: &RestSemifunctor) -> Self {
        let (s, t) = (&*f.source, &*f.target);
        FunctorFile {
            source: None,
            target: None,
            objects: s.objects().map(|x| (s.obj_name(x).into(), t.obj_name(f.obj(x)).into())).collect(),
            arrows: s.arrows().map(|a| (s.arr_name(a).into(), t.arr_name(f.arr(a)).into())).collect(),
        }
    }

    /// With both categories embedded.
    pub fn embedded(f: &RestSemifunctor) -> Self {
        FunctorFile {
            source: Some(CategoryRef::Embedded(Box::new(CategoryFile::from_category(&f.source, None)))),
            target: Some(CategoryRef::Embedded(Box::new(CategoryFile::from_category(&f.target, None)))),
            ..Self::names_of(f)
        }
    }

    /// Resolves the name maps against given categories.
    pub fn resolve(&self, source: Arc<FinRestCat>, target: Arc<FinRestCat>) -> Result<RestSemifunctor> {
        let obj_map = source
            .objects()
            .map(|x| {
                let name = self
                    .objects
                    .get(source.obj_name(x))
                    .ok_or_else(|| field("objects", format!("`{}` is not mapped", source.obj_name(x))))?;
                target.obj_by_name(name)
            })
            .collect::<Result<Vec<_>>>()?;
        let arr_map = source
            .arrows()
            .map(|a| {
                let name = self
                    .arrows
                    .get(source.arr_name(a))
                    .ok_or_else(|| field("arrows", format!("`{}` is not mapped", source.arr_name(a))))?;
                target.arr_by_name(name)
            })
            .collect::<Result<Vec<_>>>()?;
        RestSemifunctor::new(source, target, obj_map, arr_map)
    }

    /// Loads both categories (paths relative to `dir`) and resolves.
    pub fn load(&self, dir: &Path) -> Result<(RestSemifunctor, Loaded, Loaded)> {
        let get = |r: &Option<CategoryRef>, what: &str| -> Result<Loaded> {
            match r {
                None => Err(field(what, "missing")),
                Some(r) => load_category_ref(r, dir),
            }
        };
        let (s, t) = (get(&self.source, "source")?, get(&self.target, "target")?);
        Ok((self.resolve(s.cat.clone(), t.cat.clone())?, s, t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackDecl {
    pub m: String,
    pub f: String,
    pub m_prime: String,
    pub f_prime: String,
}

/// A category (trivial restriction expected) with its M-maps and
/// optionally chosen pullbacks; missing pullbacks are searched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MCategoryFile {
    #[serde(flatten)]
    pub category: CategoryFile,
    pub monics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pullbacks: Option<Vec<PullbackDecl>>,
}

impl MCategoryFile {
    pub fn from_mcategory(mc: &MCategory) -> Self {
        let c = &*mc.cat;
        let a = |f: ArrId| c.arr_name(f).to_string();
        MCategoryFile {
            category: CategoryFile::from_category(c, None),
            monics: mc.m_arrows().map(a).collect(),
            pullbacks: Some(
                mc.pullbacks
                    .iter()
                    .map(|(&(m, f), pb)| PullbackDecl {
                        m: a(m),
                        f: a(f),
                        m_prime: a(pb.m_prime),
                        f_prime: a(pb.f_prime),
                    })
                    .collect(),
            ),
        }
    }

    pub fn to_mcategory(&self) -> Result<MCategory> {
        let (c, _) = self.category.to_category()?;
        let c = Arc::new(c);
        let mut m = vec![false; c.n_arrows()];
        for name in &self.monics {
            m[c.arr_by_name(name)?] = true;
        }
        let mut mc = MCategory::new(c.clone(), m)?;
        for pb in self.pullbacks.iter().flatten() {
            let key = (c.arr_by_name(&pb.m)?, c.arr_by_name(&pb.f)?);
            if !mc.pullbacks.contains_key(&key) {
                return Err(field("pullbacks", format!("`{}` along `{}` is not an M-cospan", pb.m, pb.f)));
            }
            mc.pullbacks.insert(
                key,
                Pullback {
                    m_prime: c.arr_by_name(&pb.m_prime)?,
                    f_prime: c.arr_by_name(&pb.f_prime)?,
                },
            );
        }
        Ok(mc)
    }
}

/// A presheaf by object and arrow names: `action[f][y]` is the image of
/// element `y` of the codomain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafFile {
    pub sizes: BTreeMap<String, usize>,
    pub action: BTreeMap<String, Vec<usize>>,
}

impl PresheafFile {
    pub fn from_presheaf(c: &FinRestCat, p: &Presheaf) -> Self {
        PresheafFile {
            sizes: c.objects().map(|x| (c.obj_name(x).into(), p.sizes[x])).collect(),
            action: c.arrows().map(|f| (c.arr_name(f).into(), p.action[f].clone())).collect(),
        }
    }

    pub fn to_presheaf(&self, c: &FinRestCat) -> Result<Presheaf> {
        let sizes = c
            .objects()
            .map(|x| {
                self.sizes
                    .get(c.obj_name(x))
                    .copied()
                    .ok_or_else(|| field("sizes", format!("no size for `{}`", c.obj_name(x))))
            })
            .collect::<Result<Vec<_>>>()?;
        let action = c
            .arrows()
            .map(|f| {
                self.action
                    .get(c.arr_name(f))
                    .cloned()
                    .ok_or_else(|| field("action", format!("no action of `{}`", c.arr_name(f))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Presheaf { sizes, action })
    }
}

/// Input to the construction commands: a category plus the blocks some
/// constructions need. `realizer_functor` maps its source (the realizers)
/// into this category, which is then the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionFile {
    #[serde(flatten)]
    pub category: CategoryFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presheaf: Option<PresheafFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizer_functor: Option<FunctorFile>,
}

/// A loaded construction input.
#[derive(Debug, Clone)]
pub struct ConstructionInput {
    pub category: Loaded,
    pub presheaf: Option<Presheaf>,
    pub realizers: Option<RestSemifunctor>,
}

pub fn load_construction(path: &Path) -> Result<ConstructionInput> {
    let file: ConstructionFile = parse(&read(path)?)?;
    let (c, cartesian) = file.category.to_category()?;
    let c = Arc::new(c);
    let presheaf = file.presheaf.as_ref().map(|p| p.to_presheaf(&c)).transpose()?;
    let realizers = match &file.realizer_functor {
        None => None,
        Some(f) => {
            let source = match &f.source {
                None => return Err(field("realizer_functor.source", "missing")),
                Some(r) => load_category_ref(r, &dir_of(path))?,
            };
            Some(f.resolve(source.cat, c.clone())?)
        }
    };
    Ok(ConstructionInput {
        category: Loaded { cat: c, cartesian },
        presheaf,
        realizers,
    })
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

fn dir_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn load_category_ref(r: &CategoryRef, dir: &Path) -> Result<Loaded> {
    match r {
        CategoryRef::Path(p) => load_category(&dir.join(p)),
        CategoryRef::Embedded(file) => {
            let (c, cartesian) = file.to_category()?;
            Ok(Loaded {
                cat: Arc::new(c),
                cartesian,
            })
        }
    }
}

pub fn load_category(path: &Path) -> Result<Loaded> {
    let file: CategoryFile = parse(&read(path)?)?;
    let (c, cartesian) = file.to_category()?;
    Ok(Loaded {
        cat: Arc::new(c),
        cartesian,
    })
}

/// A bundle `p: E -> B` with both categories loaded.
pub fn load_bundle(path: &Path) -> Result<(RestSemifunctor, Loaded, Loaded)> {
    let file: FunctorFile = parse(&read(path)?)?;
    file.load(&dir_of(path))
}

pub fn load_mcategory(path: &Path) -> Result<MCategory> {
    let file: MCategoryFile = parse(&read(path)?)?;
    file.to_mcategory()
}

/// What a fixture file holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FixtureFile {
    MCategory(MCategoryFile),
    Category(CategoryFile),
    Bundle(FunctorFile),
}

/// The registry: name and one-line description.
pub const FIXTURES: &[(&str, &str)] = &[
    ("FIX-TRIV2", "two objects, identities only"),
    ("FIX-I2", "partial injections on a two-element set"),
    ("FIX-PAR1", "partial maps between sets of size at most one, with products"),
    ("FIX-PAR2", "partial maps between {}, {a} and {a,b}"),
    ("FIX-SETS1-MONO", "total maps of sets of size at most one, M = injections"),
    ("FIX-SETS2-MONO", "total maps between {}, {a} and {a,b}, M = injections"),
    ("FIX-SETS2-ISO", "total maps between {}, {a} and {a,b}, M = isomorphisms"),
    ("T1-SPLIT", "Split_r(I2) -> I2"),
    ("T1-PRODUCT", "I2 x TRIV2 -> TRIV2"),
    ("T1-LAX-SLICE", "lax simple slice over PAR1"),
    ("T1-STRICT-SLICE", "strict simple slice over PAR1"),
    ("T1-LAX-CODOMAIN", "lax codomain over PAR1"),
    ("T1-STRICT-CODOMAIN", "strict codomain over PAR1"),
    ("T1-PROPOSITIONS", "O(I2) -> I2"),
    ("T1-ELEMENTS", "elements of the two-point collapsing presheaf on I2"),
    ("T1-ASSEMBLIES", "Asm(1_PAR1) -> PAR1"),
];

pub fn fixture(name: &str) -> Result<FixtureFile> {
    let cat = |c: FinRestCat| FixtureFile::Category(CategoryFile::from_category(&c, None));
    let mcat = |c: FinRestCat, keep: fn(&FinRestCat, ArrId) -> bool| -> Result<FixtureFile> {
        let mc = MCategory::from_predicate(Arc::new(c), keep)?;
        Ok(FixtureFile::MCategory(MCategoryFile::from_mcategory(&mc)))
    };
    Ok(match name {
        "FIX-TRIV2" => cat(fixtures::triv2()),
        "FIX-I2" => cat(fixtures::i2()),
        "FIX-PAR1" => {
            let c = fixtures::par1();
            let cart = find_cartesian_structure(&c);
            FixtureFile::Category(CategoryFile::from_category(&c, Some(&cart)))
        }
        "FIX-PAR2" => cat(fixtures::par2()),
        "FIX-SETS1-MONO" => mcat(fixtures::sets1().cat, crate::mcat::injections)?,
        "FIX-SETS2-MONO" => mcat(fixtures::sets2().cat, crate::mcat::injections)?,
        "FIX-SETS2-ISO" => mcat(fixtures::sets2().cat, crate::mcat::isos)?,
        _ => {
            let i = FIXTURES
                .iter()
                .filter(|(n, _)| n.starts_with("T1-"))
                .position(|(n, _)| *n == name)
                .ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
            let fib = crate::table1::build_row(i)?;
            FixtureFile::Bundle(FunctorFile::embedded(&fib.p))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_round_trips() {
        for (name, _) in FIXTURES {
            let f = fixture(name).unwrap();
            let text = to_json(&f);
            let back: FixtureFile = parse(&text).unwrap();
            assert_eq!(back, f, "{name}");
            match &back {
                FixtureFile::Category(c) => {
                    let (cat, cart) = c.to_category().unwrap();
                    assert_eq!(CategoryFile::from_category(&cat, cart.as_ref()), *c);
                }
                FixtureFile::MCategory(m) => {
                    let mc = m.to_mcategory().unwrap();
                    assert_eq!(MCategoryFile::from_mcategory(&mc), *m);
                }
                FixtureFile::Bundle(b) => {
                    let (p, _, _) = b.load(Path::new(".")).unwrap();
                    assert_eq!(FunctorFile::embedded(&p), *b);
                }
            }
        }
    }

    #[test]
    fn fixture_counts() {
        let load = |n| match fixture(n).unwrap() {
            FixtureFile::Category(c) => c.to_category().unwrap().0,
            _ => unreachable!(),
        };
        let t = load("FIX-TRIV2");
        assert_eq!((t.n_objects(), t.n_arrows()), (2, 2));
        let i = load("FIX-I2");
        assert_eq!((i.n_objects(), i.n_arrows()), (1, 7));
        let p = load("FIX-PAR2");
        assert_eq!(p.n_objects(), 3);
        let ab = p.obj_by_name("{a,b}").unwrap();
        assert_eq!(p.hom(ab, ab).len(), 9);
        assert!(matches!(fixture("FIX-NOPE"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn load_errors_name_the_field() {
        let mut f = CategoryFile::from_category(&fixtures::i2(), None);
        f.compose.pop();
        assert!(matches!(f.to_category(), Err(Error::MalformedTable(_))));
        let mut f = CategoryFile::from_category(&fixtures::i2(), None);
        f.compose[0][2] = "nope".into();
        assert!(matches!(f.to_category(), Err(Error::Field { .. })));
        let text = to_json(&CategoryFile::from_category(&fixtures::i2(), None));
        let with_block = text.replacen('{', "{\"presheaf\": {\"sizes\": {\"*\": 1}, \"action\": {}},", 1);
        let file: ConstructionFile = parse(&with_block).unwrap();
        assert!(file.presheaf.is_some() && file.realizer_functor.is_none());
        assert!(parse::<CategoryFile>(&with_block).is_err());
        let err = parse::<CategoryFile>("{\n  \"objects\": [1]\n}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }
}
