//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines are printed by a plain `cargo test`.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use latent::cartesian::find_cartesian_structure;
use latent::constructions::{
    assemblies, codomain, elements, identity_fibration, projection_fibration, propositions, simple_slice,
    splitting_projection, Mode, Presheaf,
};
use latent::dual::{double_dual, dual_checks, fibrational_dual, span_category, HQSystem};
use latent::fibration::{
    certify_composite, certify_latent_fibration, certify_pullback, is_hyperconnected, is_prone_old, is_separated,
    split_fibration, FibrationReport,
};
use latent::functors::RestSemifunctor;
use latent::iso::find_isomorphism;
use latent::latpull::{commuting_squares, is_latent_pullback, is_latent_pullback_original};
use latent::mcat::{
    codomain_mfibration, identity_mfibration, injections, isos, par, par_of_fibration, par_total_round_trip,
    total_par_round_trip, verify_mcategory, verify_mfibration, MCategory, SquareClass,
};
use latent::restriction::{is_r_split, verify_restriction_axioms};
use latent::{fixtures, table1, FinRestCat};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Option<Duration>, &'a dyn Fn() -> Outcome);

fn ensure(ok: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

/// The fixture fibrations. The base categories are shared so that
/// composites and pullbacks line up.
struct Zoo {
    bases: Vec<(&'static str, Arc<FinRestCat>)>,
    fibs: Vec<(String, FibrationReport)>,
}

impl Zoo {
    fn build() -> latent::Result<Self> {
        let triv2 = Arc::new(fixtures::triv2());
        let i2 = Arc::new(fixtures::i2());
        let par1 = Arc::new(fixtures::par1());
        let par2 = Arc::new(fixtures::par2());
        let cart = find_cartesian_structure(&par1);
        let mut fibs: Vec<(String, FibrationReport)> = Vec::new();
        let bases = vec![("TRIV2", triv2.clone()), ("I2", i2.clone()), ("PAR1", par1.clone()), ("PAR2", par2.clone())];
        for (name, c) in &bases {
            fibs.push((format!("identity on {name}"), identity_fibration(c)));
            fibs.push((format!("Split_r({name}) -> {name}"), splitting_projection(c).1));
        }
        for (i, (name, _)) in table1::ROWS.iter().enumerate() {
            fibs.push((format!("table row: {name}"), table1::build_row(i)?));
        }
        for mode in [Mode::Strict, Mode::Lax] {
            fibs.push((format!("{mode} simple slice over PAR1"), simple_slice(&par1, &cart, mode)?.report));
            fibs.push((format!("{mode} codomain over PAR1"), codomain(&par1, mode)?.report));
            fibs.push((format!("{mode} codomain over PAR2"), codomain(&par2, mode)?.report));
        }
        fibs.push(("I2 x PAR1 -> PAR1".into(), projection_fibration(&i2, &par1)?.report));
        fibs.push(("O(PAR1) -> PAR1".into(), propositions(&par1)?.report));
        fibs.push(("O(PAR2) -> PAR2".into(), propositions(&par2)?.report));
        fibs.push(("Elt(1) -> PAR1".into(), elements(&par1, &Presheaf::terminal(&par1))?.report));
        fibs.push(("Elt(F) -> I2, F collapsing".into(), elements(&i2, &Presheaf::collapsing(&i2, 2)?)?.report));
        fibs.push(("Asm(1_PAR1) -> PAR1".into(), assemblies(&RestSemifunctor::identity(par1.clone()), &cart)?.report));
        for class in [SquareClass::Monic, SquareClass::Pullback] {
            let q = codomain_mfibration(&Arc::new(fixtures::sets1().cat), class)?;
            fibs.push((format!("Par of the {class:?} codomain over Sets1"), par_of_fibration(&q)?.report));
        }
        Ok(Zoo { bases, fibs })
    }

    fn latent(&self) -> impl Iterator<Item = &(String, FibrationReport)> {
        self.fibs.iter().filter(|(_, f)| f.flags.latent_fibration)
    }
}

fn axioms(cats: &[(String, Arc<FinRestCat>)]) -> Outcome {
    for (name, c) in cats {
        let r = verify_restriction_axioms(c);
        ensure(r.passed(), || format!("{name}: {r}"))?;
    }
    Ok(format!("{} categories", cats.len()))
}

fn criterion1(zoo: &Zoo) -> Outcome {
    let mut cats: Vec<(String, Arc<FinRestCat>)> =
        zoo.bases.iter().map(|(n, c)| (n.to_string(), c.clone())).collect();
    for (name, fib) in &zoo.fibs {
        cats.push((format!("total of {name}"), fib.p.source.clone()));
    }
    for (name, fib) in zoo.latent() {
        if fib.flags.is_hyperfibration() {
            let d = fibrational_dual(fib).map_err(|e| format!("{name}: {e}"))?;
            cats.push((format!("dual of {name}"), d.cat().clone()));
        }
    }
    let i2 = Arc::new(fixtures::i2());
    let sys = HQSystem::from_predicates(&i2, |f| i2.is_partial_iso(f), |f| i2.is_partial_iso(f));
    let spans = span_category(&i2, &sys).map_err(|e| e.to_string())?;
    cats.push(("Span(I2; partial isos)".into(), spans.cat.clone()));
    for mc in m_fixtures() {
        let p = par(&mc.1).map_err(|e| e.to_string())?;
        cats.push((format!("Par({})", mc.0), p.cat));
    }
    axioms(&cats)
}

fn criterion2() -> Outcome {
    let rows = table1::reproduce().map_err(|e| e.to_string())?;
    for r in &rows {
        ensure(r.passed(), || format!("{}: expected {}, observed {}", r.name, r.expected, r.observed))?;
    }
    Ok(format!("{} rows", rows.len()))
}

fn criterion3(zoo: &Zoo) -> Outcome {
    let mut n = 0;
    for (name, fib) in zoo.fibs.iter().filter(|(_, f)| f.flags.restriction_functor) {
        for f in fib.total().arrows() {
            let old = is_prone_old(&fib.p, f).map_err(|e| format!("{name}: {e}"))?;
            ensure(old == fib.prone[f], || format!("{name}: {}", fib.total().arr_name(f)))?;
            n += 1;
        }
    }
    Ok(format!("{n} arrows"))
}

fn criterion4(zoo: &Zoo) -> Outcome {
    let mut n = 0;
    for (name, fib) in zoo.latent() {
        let sep = is_separated(&fib.p);
        ensure(sep == fib.idempotents_prone && sep == fib.partial_isos_prone, || {
            format!(
                "{name}: separated {sep}, idempotents prone {}, partial isos prone {}",
                fib.idempotents_prone, fib.partial_isos_prone
            )
        })?;
        let hyper = is_hyperconnected(&fib.p);
        ensure(hyper == (sep && fib.flags.admissible), || {
            format!("{name}: hyperconnected {hyper}, separated {sep}, admissible {}", fib.flags.admissible)
        })?;
        n += 1;
    }
    let failing = ["table row: lax simple slice over PAR1", "table row: O(I2) -> I2"];
    for name in failing {
        ensure(zoo.latent().any(|(n, _)| n == name), || format!("{name} is missing"))?;
    }
    Ok(format!("{n} latent fibrations"))
}

fn criterion5(zoo: &Zoo) -> Outcome {
    let mut pairs = 0;
    for (name, fib) in zoo.latent() {
        let e = fib.total();
        for f in fib.prone_arrows() {
            for &g in e.out_of(e.cod(f)) {
                if fib.prone[g] {
                    ensure(fib.prone[e.comp(f, g)], || format!("{name}: {} then {}", e.arr_name(f), e.arr_name(g)))?;
                    pairs += 1;
                }
            }
        }
    }

    // Composites: Split(p) then the splitting projection, and a projection
    // onto the total of a codomain fibration then the codomain.
    let par1 = Arc::new(fixtures::par1());
    let cod = codomain(&par1, Mode::Strict).map_err(|e| e.to_string())?.report;
    let over_cod = projection_fibration(&fixtures::i2(), &cod.p.source).map_err(|e| e.to_string())?.report;
    let lax = simple_slice(&par1, &find_cartesian_structure(&par1), Mode::Lax).map_err(|e| e.to_string())?.report;
    let split = split_fibration(&lax).map_err(|e| e.to_string())?;
    let split_report = certify_latent_fibration(&split.p);
    let unsplit = certify_latent_fibration(&split.base.forget);
    let mut composites = 0;
    for (name, q, p) in [("I2 x Arr -> Arr -> PAR1", &over_cod, &cod), ("Split(lax slice) then U", &split_report, &unsplit)] {
        ensure(q.flags.latent_fibration && p.flags.latent_fibration, || format!("{name}: factors"))?;
        let qp = certify_composite(&q.p, &p.p).map_err(|e| format!("{name}: {e}"))?;
        ensure(qp.flags.latent_fibration, || format!("{name}: composite is not a latent fibration"))?;
        for f in q.total().arrows() {
            if q.prone[f] && p.prone[q.p.arr(f)] {
                ensure(qp.prone[f], || format!("{name}: {}", q.total().arr_name(f)))?;
            }
        }
        composites += 1;
    }

    // Pullbacks of fibrations over PAR1 along the projections of others.
    let mut pullbacks = 0;
    let slice = simple_slice(&par1, &find_cartesian_structure(&par1), Mode::Strict).map_err(|e| e.to_string())?.report;
    let props = propositions(&par1).map_err(|e| e.to_string())?.report;
    let over: [(&str, &FibrationReport); 4] = [("codomain", &cod), ("lax slice", &lax), ("slice", &slice), ("O", &props)];
    for (pn, p) in over {
        for (fname, f) in over {
            let pb = certify_pullback(&p.p, &f.p).map_err(|e| format!("{pn} along {fname}: {e}"))?;
            ensure(pb.report.flags.latent_fibration, || format!("{pn} along {fname}: not a latent fibration"))?;
            for w in pb.w.arrows() {
                if p.prone[pb.p1.arr(w)] {
                    ensure(pb.report.prone[w], || format!("{pn} along {fname}: {}", pb.w.arr_name(w)))?;
                }
            }
            pullbacks += 1;
        }
    }
    Ok(format!("{pairs} prone pairs, {composites} composites, {pullbacks} pullbacks"))
}

fn m_fixtures() -> Vec<(&'static str, MCategory)> {
    let s1 = Arc::new(fixtures::sets1().cat);
    let s2 = Arc::new(fixtures::sets2().cat);
    vec![
        ("Sets1, injections", MCategory::from_predicate(s1.clone(), injections).expect("M-category")),
        ("Sets1, isos", MCategory::from_predicate(s1, isos).expect("M-category")),
        ("Sets2, injections", MCategory::from_predicate(s2.clone(), injections).expect("M-category")),
        ("Sets2, isos", MCategory::from_predicate(s2, isos).expect("M-category")),
    ]
}

fn criterion6(zoo: &Zoo) -> Outcome {
    let mut n = 0;
    let mut candidates: Vec<(String, Arc<FinRestCat>)> =
        zoo.bases.iter().map(|(name, c)| (name.to_string(), c.clone())).collect();
    candidates.extend(zoo.fibs.iter().map(|(name, f)| (format!("total of {name}"), f.p.source.clone())));
    for (name, c) in candidates.iter().filter(|(_, c)| is_r_split(c)) {
        ensure(par_total_round_trip(c).map_err(|e| format!("{name}: {e}"))?, || format!("Par(Total({name}))"))?;
        n += 1;
    }
    for (name, mc) in m_fixtures() {
        ensure(verify_mcategory(&mc).passed(), || format!("{name} is not an M-category"))?;
        ensure(total_par_round_trip(&mc).map_err(|e| format!("{name}: {e}"))?, || format!("Total(Par({name}))"))?;
        n += 1;
    }

    let sets1 = Arc::new(fixtures::sets1().cat);
    let mut qs = Vec::new();
    for class in [SquareClass::Monic, SquareClass::Pullback] {
        qs.push((format!("{class:?} codomain"), codomain_mfibration(&sets1, class).map_err(|e| e.to_string())?));
    }
    for (name, keep) in [("injections", injections as fn(&FinRestCat, _) -> bool), ("isos", isos)] {
        let c = Arc::new(fixtures::sets2().cat);
        qs.push((format!("identity on Sets2, {name}"), identity_mfibration(&c, keep).map_err(|e| e.to_string())?));
    }
    for (name, q) in &qs {
        let m = verify_mfibration(q);
        let g = par_of_fibration(q).map_err(|e| format!("{name}: {e}"))?.report.flags;
        let expect = (m.is_m_fibration(), m.admissible_m, m.separated_m, m.admissible_m && m.separated_m);
        let got = (g.latent_fibration, g.admissible, g.separated, g.hyperconnected);
        ensure(expect == got && g.r_split, || format!("{name}: M-flags {expect:?}, Par flags {got:?}"))?;
    }
    Ok(format!("{n} round trips, {} M-fibrations", qs.len()))
}

fn criterion7(zoo: &Zoo) -> Outcome {
    let mut n = 0;
    for (name, fib) in zoo.latent().filter(|(_, f)| f.flags.admissible) {
        let split = split_fibration(fib).map_err(|e| format!("{name}: {e}"))?;
        let s = certify_latent_fibration(&split.p);
        ensure(s.flags.latent_fibration && s.flags.admissible, || format!("{name}: {}", s.flags))?;
        ensure(!fib.flags.hyperconnected || s.flags.hyperconnected, || format!("{name}: {}", s.flags))?;
        n += 1;
    }
    Ok(format!("{n} admissible fibrations"))
}

fn criterion8(zoo: &Zoo) -> Outcome {
    let mut n = 0;
    let mut slowest = (Duration::ZERO, String::new());
    for (name, fib) in zoo.latent().filter(|(_, f)| f.flags.is_hyperfibration()) {
        let start = Instant::now();
        let d = fibrational_dual(fib).map_err(|e| format!("{name}: {e}"))?;
        ensure(d.report.flags.is_hyperfibration(), || format!("{name}: dual is {}", d.report.flags))?;
        let checks = dual_checks(&d);
        ensure(checks.passed(), || format!("{name}: {checks}"))?;
        let dd = double_dual(fib).map_err(|e| format!("{name}: {e}"))?;
        let r = dd.report();
        ensure(r.passed(), || format!("{name}: {r}"))?;
        let t = start.elapsed();
        if t > slowest.0 {
            slowest = (t, name.clone());
        }
        n += 1;
    }
    for (name, c) in &zoo.bases {
        let d = fibrational_dual(&identity_fibration(c)).map_err(|e| e.to_string())?;
        ensure(find_isomorphism(d.cat(), c).is_some(), || format!("the identity dual on {name}"))?;
    }
    ensure(slowest.0 < Duration::from_secs(60), || format!("{} took {:?}", slowest.1, slowest.0))?;
    Ok(format!("{n} hyperfibrations, slowest {} in {:.1?}", slowest.1, slowest.0))
}

fn criterion9(zoo: &Zoo) -> Outcome {
    // Every square of every category small enough for the exhaustive
    // cone enumeration.
    const MAX_ARROWS: usize = 200;
    let mut cats: Vec<(String, Arc<FinRestCat>)> =
        zoo.bases.iter().map(|(n, c)| (n.to_string(), c.clone())).collect();
    cats.extend(zoo.fibs.iter().map(|(n, f)| (format!("total of {n}"), f.p.source.clone())));
    let mut squares = 0;
    let mut skipped = 0;
    for (name, c) in &cats {
        if c.n_arrows() > MAX_ARROWS {
            skipped += 1;
            continue;
        }
        for f in c.arrows() {
            for &b in FinRestCat::into(c, c.cod(f)) {
                for sq in commuting_squares(c, f, b) {
                    ensure(is_latent_pullback(c, &sq) == is_latent_pullback_original(c, &sq), || {
                        format!("{name}: {sq:?}")
                    })?;
                    squares += 1;
                }
            }
        }
    }
    Ok(format!("{squares} squares in {} categories ({skipped} over {MAX_ARROWS} arrows skipped)", cats.len() - skipped))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let zoo = match Zoo::build() {
        Ok(z) => z,
        Err(e) => {
            println!("cannot build the fixtures: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!("fixtures built in {:.1?}", start.elapsed());
    let criteria: [Criterion; 9] = [
        ("axiom suite", Some(Duration::from_secs(10)), &|| criterion1(&zoo)),
        ("table reproduction", None, &criterion2),
        ("prone definitions agree", None, &|| criterion3(&zoo)),
        ("separated and hyperconnected equivalences", None, &|| criterion4(&zoo)),
        ("closure of prones, composites and pullbacks", None, &|| criterion5(&zoo)),
        ("M-category round trips and flag transfer", None, &|| criterion6(&zoo)),
        ("splitting stability", None, &|| criterion7(&zoo)),
        ("dual suite", None, &|| criterion8(&zoo)),
        ("latent pullback definitions agree", None, &|| criterion9(&zoo)),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut outcome = run();
        let elapsed = t.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed > *limit {
                outcome = Err(format!("took {elapsed:.1?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{elapsed:.1?}]", i + 1),
            Err(witness) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {witness} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
