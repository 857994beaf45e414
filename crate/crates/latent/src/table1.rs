//! The table of example fibrations and their properties, one fixture
//! instantiation per row.

use std::fmt;
use std::sync::Arc;

use crate::cartesian::find_cartesian_structure;
use crate::constructions::{
    assemblies, codomain, elements, projection_fibration, propositions, simple_slice,
    splitting_projection, Mode, Presheaf,
};
use crate::error::Result;
use crate::fibration::FibrationReport;
use crate::fixtures;
use crate::functors::RestSemifunctor;

/// `(restriction functor, admissible, separated, hyperfibration)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row {
    pub functor: bool,
    pub admissible: bool,
    pub separated: bool,
    pub hyper: bool,
}

impl Row {
    const fn new(functor: bool, admissible: bool, separated: bool, hyper: bool) -> Self {
        Row {
            functor,
            admissible,
            separated,
            hyper,
        }
    }

    /// The row computed from a certification. The hyperfibration column is
    /// the conjunction of the latent fibration flag with admissible and
    /// separated; the bijectivity flag is checked against it separately.
    pub fn observed(fib: &FibrationReport) -> Self {
        let f = fib.flags;
        Row::new(
            f.restriction_functor,
            f.admissible,
            f.separated,
            f.latent_fibration && f.admissible && f.separated,
        )
    }
}

fn mark(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "functor {:3}  admissible {:3}  separated {:3}  hyper {:3}",
            mark(self.functor),
            mark(self.admissible),
            mark(self.separated),
            mark(self.hyper)
        )
    }
}

pub const ROWS: [(&str, Row); 9] = [
    ("Split_r(I2) -> I2", Row::new(false, true, true, true)),
    ("I2 x TRIV2 -> TRIV2", Row::new(true, true, false, false)),
    ("lax simple slice over PAR1", Row::new(true, true, false, false)),
    ("strict simple slice over PAR1", Row::new(true, true, true, true)),
    ("lax codomain over PAR1", Row::new(true, true, false, false)),
    ("strict codomain over PAR1", Row::new(true, true, true, true)),
    ("O(I2) -> I2", Row::new(true, false, true, false)),
    ("Elt(F) -> I2, F two-point collapsing", Row::new(true, false, true, false)),
    ("Asm(1_PAR1) -> PAR1", Row::new(true, true, true, true)),
];

/// Builds the fibration of row `i` (in the order of [`ROWS`]).
pub fn build_row(i: usize) -> Result<FibrationReport> {
    let i2 = || Arc::new(fixtures::i2());
    let par1 = Arc::new(fixtures::par1());
    let cart = find_cartesian_structure(&par1);
    Ok(match i {
        0 => splitting_projection(&i2()).1,
        1 => projection_fibration(&fixtures::i2(), &Arc::new(fixtures::triv2()))?.report,
        2 => simple_slice(&par1, &cart, Mode::Lax)?.report,
        3 => simple_slice(&par1, &cart, Mode::Strict)?.report,
        4 => codomain(&par1, Mode::Lax)?.report,
        5 => codomain(&par1, Mode::Strict)?.report,
        6 => propositions(&i2())?.report,
        7 => {
            let c = i2();
            let f = Presheaf::collapsing(&c, 2)?;
            elements(&c, &f)?.report
        }
        8 => assemblies(&RestSemifunctor::identity(par1.clone()), &cart)?.report,
        _ => panic!("the table has {} rows", ROWS.len()),
    })
}

/// One reproduced row.
#[derive(Debug, Clone)]
pub struct RowResult {
    pub name: &'static str,
    pub expected: Row,
    pub observed: Row,
    pub latent_fibration: bool,
    /// The bijectivity test agrees with the hyperfibration column.
    pub hyper_consistent: bool,
}

impl RowResult {
    pub fn passed(&self) -> bool {
        self.expected == self.observed && self.latent_fibration && self.hyper_consistent
    }
}

pub fn reproduce() -> Result<Vec<RowResult>> {
    ROWS.iter()
        .enumerate()
        .map(|(i, &(name, expected))| {
            let fib = build_row(i)?;
            let observed = Row::observed(&fib);
            Ok(RowResult {
                name,
                expected,
                observed,
                latent_fibration: fib.flags.latent_fibration,
                hyper_consistent: fib.flags.hyperconnected == observed.hyper,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_matches() {
        for r in reproduce().unwrap() {
            assert!(r.passed(), "{}: expected {}, got {}", r.name, r.expected, r.observed);
        }
    }
}
