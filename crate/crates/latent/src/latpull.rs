//! Latent pullbacks.
//!
//! A square is written with these names:
//!
//! ```text
//!   A' --f'--> B'
//!   |          |
//!   a          b
//!   v          v
//!   A ---f---> B
//! ```

use crate::category::{ArrId, FinRestCat, ObjId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub f_prime: ArrId,
    pub a: ArrId,
    pub f: ArrId,
    pub b: ArrId,
}

impl Square {
    pub fn apex(&self, c: &FinRestCat) -> ObjId {
        c.dom(self.a)
    }

    pub fn is_well_typed(&self, c: &FinRestCat) -> bool {
        c.dom(self.f_prime) == c.dom(self.a)
            && c.cod(self.a) == c.dom(self.f)
            && c.cod(self.f_prime) == c.dom(self.b)
            && c.cod(self.f) == c.cod(self.b)
    }

    pub fn commutes(&self, c: &FinRestCat) -> bool {
        self.is_well_typed(c) && c.comp(self.f_prime, self.b) == c.comp(self.a, self.f)
    }

    /// `f' \bar b = f'` and `a \bar f = a`.
    pub fn is_precise(&self, c: &FinRestCat) -> bool {
        c.comp(self.f_prime, c.rst(self.b)) == self.f_prime
            && c.comp(self.a, c.rst(self.f)) == self.a
    }
}

/// The arrows `k: X -> A'` admissible as mediators for some cone: those with
/// `k \bar{f'} = k \bar a = k`.
fn mediator_candidates(c: &FinRestCat, sq: &Square, x: ObjId) -> Vec<ArrId> {
    c.hom(x, sq.apex(c))
        .iter()
        .copied()
        .filter(|&k| c.comp(k, c.rst(sq.f_prime)) == k && c.comp(k, c.rst(sq.a)) == k)
        .collect()
}

/// Decides the latent pullback property with the universal property indexed
/// by restriction idempotents: for every `e`-commuting cone `(x0, x1)`
/// with `e <= \bar{x1 f}` and `e <= \bar{x0 b}` there is exactly one `k`
/// with `\bar k = e`, `k f' <= x0`, `k a <= x1`.
pub fn is_latent_pullback(c: &FinRestCat, sq: &Square) -> bool {
    if !sq.commutes(c) || !sq.is_precise(c) {
        return false;
    }
    let (bp, a) = (c.dom(sq.b), c.dom(sq.f));
    c.objects().all(|x| {
        let ks = mediator_candidates(c, sq, x);
        c.idempotents(x).into_iter().all(|e| {
            c.hom(x, bp).iter().all(|&x0| {
                let x0b = c.comp(x0, sq.b);
                if c.comp(e, c.rst(x0b)) != e {
                    return true;
                }
                c.hom(x, a).iter().all(|&x1| {
                    let x1f = c.comp(x1, sq.f);
                    if c.comp(e, c.rst(x1f)) != e || c.comp(e, x1f) != c.comp(e, x0b) {
                        return true;
                    }
                    ks.iter()
                        .filter(|&&k| {
                            c.rst(k) == e
                                && c.le(c.comp(k, sq.f_prime), x0)
                                && c.le(c.comp(k, sq.a), x1)
                        })
                        .take(2)
                        .count()
                        == 1
                })
            })
        })
    })
}

/// The original form of the universal property: for every commuting cone
/// `x0 b = x1 f` exactly one `k` with `\bar k = \bar{x1 f}`, `k f' <= x0`,
/// `k a <= x1`.
pub fn is_latent_pullback_original(c: &FinRestCat, sq: &Square) -> bool {
    if !sq.commutes(c) || !sq.is_precise(c) {
        return false;
    }
    let (bp, a) = (c.dom(sq.b), c.dom(sq.f));
    c.objects().all(|x| {
        let ks = mediator_candidates(c, sq, x);
        c.hom(x, bp).iter().all(|&x0| {
            let x0b = c.comp(x0, sq.b);
            c.hom(x, a).iter().all(|&x1| {
                let x1f = c.comp(x1, sq.f);
                if x1f != x0b {
                    return true;
                }
                let e = c.rst(x1f);
                ks.iter()
                    .filter(|&&k| {
                        c.rst(k) == e
                            && c.le(c.comp(k, sq.f_prime), x0)
                            && c.le(c.comp(k, sq.a), x1)
                    })
                    .take(2)
                    .count()
                    == 1
            })
        })
    })
}

/// Every commuting square over `f` and `b`, any apex.
pub fn commuting_squares(c: &FinRestCat, f: ArrId, b: ArrId) -> Vec<Square> {
    let mut out = Vec::new();
    if c.cod(f) != c.cod(b) {
        return out;
    }
    for apex in c.objects() {
        for &f_prime in c.hom(apex, c.dom(b)) {
            for &a in c.hom(apex, c.dom(f)) {
                let sq = Square { f_prime, a, f, b };
                if sq.commutes(c) {
                    out.push(sq);
                }
            }
        }
    }
    out
}

/// All latent pullbacks of the cospan `f: A -> B <- B': b`, trying every
/// object as apex. Empty when there are none.
pub fn find_latent_pullbacks(c: &FinRestCat, f: ArrId, b: ArrId) -> Vec<Square> {
    commuting_squares(c, f, b)
        .into_iter()
        .filter(|sq| sq.is_precise(c) && is_latent_pullback(c, sq))
        .collect()
}

/// The first latent pullback found, if any.
pub fn latent_pullback(c: &FinRestCat, f: ArrId, b: ArrId) -> Option<Square> {
    commuting_squares(c, f, b)
        .into_iter()
        .find(|sq| sq.is_precise(c) && is_latent_pullback(c, sq))
}

/// The mediating partial isomorphism `alpha: A'_1 -> A'_2` between two
/// squares over one cospan: `alpha a_2 = a_1`, `alpha f'_2 = f'_1`,
/// `\bar alpha = \bar{a_1} = \bar{f'_1}` and `\bar{alpha^-1} = \bar{a_2} =
/// \bar{f'_2}`.
pub fn mediate_squares(c: &FinRestCat, sq1: &Square, sq2: &Square) -> Option<ArrId> {
    if sq1.f != sq2.f || sq1.b != sq2.b {
        return None;
    }
    if c.rst(sq1.a) != c.rst(sq1.f_prime) || c.rst(sq2.a) != c.rst(sq2.f_prime) {
        return None;
    }
    c.hom(sq1.apex(c), sq2.apex(c)).iter().copied().find(|&alpha| {
        let Some(inv) = c.partial_inverse(alpha) else {
            return false;
        };
        c.comp(alpha, sq2.a) == sq1.a
            && c.comp(alpha, sq2.f_prime) == sq1.f_prime
            && c.rst(alpha) == c.rst(sq1.a)
            && c.rst(inv) == c.rst(sq2.a)
    })
}

/// Horizontal pasting: `left` has right edge `b`, which must be the left
/// edge `a` of `right`.
pub fn paste(c: &FinRestCat, left: &Square, right: &Square) -> Option<Square> {
    (left.b == right.a).then(|| Square {
        f_prime: c.comp(left.f_prime, right.f_prime),
        a: left.a,
        f: c.comp(left.f, right.f),
        b: right.b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_square() {
        let c = fixtures::i2();
        let one = c.id(0);
        let sq = Square {
            f_prime: one,
            a: one,
            f: one,
            b: one,
        };
        assert!(is_latent_pullback(&c, &sq));
    }

    #[test]
    fn imprecise_square_fails() {
        // 0 then b>b = 0 = a>a then 0, but a>a followed by \bar 0 is not a>a
        let c = fixtures::i2();
        let n = |s| c.arr_by_name(s).unwrap();
        let sq = Square {
            f_prime: n("0"),
            a: n("a>a"),
            f: n("0"),
            b: n("b>b"),
        };
        assert!(sq.commutes(&c));
        assert!(!sq.is_precise(&c));
        assert!(!is_latent_pullback(&c, &sq));
    }

    #[test]
    fn cospan_fixture_has_no_latent_pullback() {
        let c = fixtures::cospan();
        let (f, g) = (c.arr_by_name("f").unwrap(), c.arr_by_name("g").unwrap());
        assert!(find_latent_pullbacks(&c, f, g).is_empty());
    }
}
