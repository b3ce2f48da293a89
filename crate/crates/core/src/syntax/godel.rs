//! Gödel coding of formulas by natural numbers.
//!
//! Each node is coded as `base * payload + tag + 1`, where `payload` is the
//! Cantor pairing of the node's children codes (or the single child code).
//! The `+ 1` offset makes every code strictly larger than the codes of its
//! immediate subformulas and at least the formula's depth. Every natural
//! decodes to at most one formula; most small naturals decode to one.

use super::{Formula, Term};
use crate::hf::AckCode;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub type GodelCode = BigUint;

const FORMULA_BASE: u32 = 7;
const TERM_BASE: u32 = 6;

mod tag {
    pub const EQ: u32 = 0;
    pub const IN: u32 = 1;
    pub const ACKMEM: u32 = 2;
    pub const PROV: u32 = 3;
    pub const NOT: u32 = 4;
    pub const OR: u32 = 5;
    pub const EXISTS: u32 = 6;
}

fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let b = z - t;
    let a = &w - &b;
    (a, b)
}

fn label_code(label: &str) -> BigUint {
    let mut bytes = vec![1u8];
    bytes.extend_from_slice(label.as_bytes());
    BigUint::from_bytes_be(&bytes)
}

fn label_decode(n: &BigUint) -> Option<String> {
    let bytes = n.to_bytes_be();
    let (first, rest) = bytes.split_first()?;
    if *first != 1 {
        return None;
    }
    String::from_utf8(rest.to_vec()).ok()
}

fn term_code(t: &Term) -> BigUint {
    let (payload, tag) = match t {
        Term::Var(v) => (BigUint::from(*v), 0u32),
        Term::Const(c) => (c.value().clone(), 1),
        Term::Zero => (BigUint::zero(), 2),
        Term::Succ(s) => (term_code(s), 3),
        Term::Add(a, b) => (pair(&term_code(a), &term_code(b)), 4),
        Term::Mul(a, b) => (pair(&term_code(a), &term_code(b)), 5),
    };
    payload * TERM_BASE + tag
}

fn term_decode(n: &BigUint) -> Option<Term> {
    let tag = (n % TERM_BASE).to_u32().unwrap();
    let payload = n / TERM_BASE;
    Some(match tag {
        0 => Term::Var(payload.to_u32()?),
        1 => Term::Const(AckCode::from(payload)),
        2 if payload.is_zero() => Term::Zero,
        2 => return None,
        3 => Term::succ(term_decode(&payload)?),
        4 | 5 => {
            let (a, b) = unpair(&payload);
            let (a, b) = (term_decode(&a)?, term_decode(&b)?);
            if tag == 4 {
                Term::add(a, b)
            } else {
                Term::mul(a, b)
            }
        }
        _ => unreachable!(),
    })
}

pub fn godel_code(f: &Formula) -> GodelCode {
    let (payload, tag) = match f {
        Formula::Eq(s, t) => (pair(&term_code(s), &term_code(t)), tag::EQ),
        Formula::In(s, t) => (pair(&term_code(s), &term_code(t)), tag::IN),
        Formula::AckMem(s, t) => (pair(&term_code(s), &term_code(t)), tag::ACKMEM),
        Formula::Prov(name, body) => (pair(&label_code(name), &godel_code(body)), tag::PROV),
        Formula::Not(g) => (godel_code(g), tag::NOT),
        Formula::Or(a, b) => (pair(&godel_code(a), &godel_code(b)), tag::OR),
        Formula::Exists(v, g) => (pair(&BigUint::from(*v), &godel_code(g)), tag::EXISTS),
    };
    payload * FORMULA_BASE + tag + 1u32
}

/// Inverse of [`godel_code`]; `None` when `n` codes no formula.
pub fn godel_decode(n: &GodelCode) -> Option<Formula> {
    if n.is_zero() {
        return None;
    }
    let m = n - 1u32;
    let tag = (&m % FORMULA_BASE).to_u32().unwrap();
    let payload = m / FORMULA_BASE;
    Some(match tag {
        tag::EQ | tag::IN | tag::ACKMEM => {
            let (a, b) = unpair(&payload);
            let (a, b) = (term_decode(&a)?, term_decode(&b)?);
            match tag {
                tag::EQ => Formula::Eq(a, b),
                tag::IN => Formula::In(a, b),
                _ => Formula::AckMem(a, b),
            }
        }
        tag::PROV => {
            let (a, b) = unpair(&payload);
            Formula::Prov(label_decode(&a)?, Box::new(godel_decode(&b)?))
        }
        tag::NOT => Formula::not(godel_decode(&payload)?),
        tag::OR => {
            let (a, b) = unpair(&payload);
            Formula::or(godel_decode(&a)?, godel_decode(&b)?)
        }
        tag::EXISTS => {
            let (v, b) = unpair(&payload);
            Formula::exists(v.to_u32()?, godel_decode(&b)?)
        }
        _ => unreachable!(),
    })
}

/// Smallest Gödel code of any formula of depth `d` (`d >= 1`).
///
/// The cheapest way to add a level is a negation (`7c + 5`); disjunctions and
/// quantifiers both pair the child with something, which costs more. The
/// smallest atom is `v0 = v0` with code 1.
pub fn min_code_at_depth(d: usize) -> GodelCode {
    assert!(d >= 1, "no formula has depth 0");
    let mut c = BigUint::one();
    for _ in 1..d {
        c = c * FORMULA_BASE + tag::NOT + 1u32;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_any;

    #[test]
    fn pairing_round_trip() {
        for z in 0u32..2000 {
            let z = BigUint::from(z);
            let (a, b) = unpair(&z);
            assert_eq!(pair(&a, &b), z);
        }
    }

    #[test]
    fn smallest_atom_is_one() {
        assert_eq!(godel_code(&parse_any("(= v0 v0)").unwrap()), BigUint::one());
        assert_eq!(godel_decode(&BigUint::zero()), None);
    }

    #[test]
    fn negation_increases_code() {
        let psi = parse_any("(in (c 0) (c 3))").unwrap();
        assert!(godel_code(&psi) < godel_code(&Formula::not(psi)));
    }

    #[test]
    fn min_code_by_brute_force() {
        // Scan every code below 20_000 and record the smallest code per depth.
        let mut best: Vec<Option<u64>> = vec![None; 8];
        for n in 1u64..20_000 {
            if let Some(f) = godel_decode(&BigUint::from(n)) {
                let d = f.depth();
                if d < best.len() && best[d].is_none() {
                    best[d] = Some(n);
                }
            }
        }
        for d in 1..=5 {
            assert_eq!(best[d].map(BigUint::from), Some(min_code_at_depth(d)), "depth {d}");
        }
        assert_eq!(best[6], None);
        assert!(min_code_at_depth(6) > BigUint::from(20_000u32));
    }

    #[test]
    fn prov_label_round_trip() {
        let f = parse_any("(prov PA (= v0 (num 0)))").unwrap();
        assert_eq!(godel_decode(&godel_code(&f)), Some(f));
    }
}
