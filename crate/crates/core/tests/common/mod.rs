//! Reference implementations used as test oracles. None of them calls the
//! library's evaluators: sets are built by powerset, membership of codes is a
//! shift and mask, and truth is the textbook recursion over an environment.

#![allow(dead_code)]

use std::collections::HashMap;
use truthbench::hf::HFSet;
use truthbench::syntax::{Formula, Term, Var};

/// `V_r` as trees, by iterated powerset.
pub fn powerset_levels(r: u32) -> Vec<HFSet> {
    let mut v: Vec<HFSet> = Vec::new();
    for _ in 0..r {
        let n = v.len();
        assert!(n < 32, "V_r too large to enumerate by powerset");
        v = (0u64..1 << n)
            .map(|mask| HFSet::from_children((0..n).filter(|i| mask >> i & 1 == 1).map(|i| v[i].clone())))
            .collect();
    }
    v
}

/// `x ∈ y` on small codes: bit `x` of `y`.
pub fn bit_mem(x: u64, y: u64) -> bool {
    x < 64 && (y >> x) & 1 == 1
}

fn set_term(t: &Term, env: &HashMap<Var, u64>) -> Option<u64> {
    match t {
        Term::Var(v) => env.get(v).copied(),
        Term::Const(c) => c.to_u64(),
        _ => None,
    }
}

/// Tarskian truth of a set sentence in the structure whose elements are the
/// codes in `domain`. `None` when the sentence leaves the structure.
pub fn naive_set_truth(f: &Formula, domain: &[u64]) -> Option<bool> {
    fn go(f: &Formula, domain: &[u64], env: &mut HashMap<Var, u64>) -> Option<bool> {
        match f {
            Formula::Eq(s, t) => Some(set_term(s, env)? == set_term(t, env)?),
            Formula::In(s, t) => Some(bit_mem(set_term(s, env)?, set_term(t, env)?)),
            Formula::Not(g) => go(g, domain, env).map(|b| !b),
            Formula::Or(a, b) => Some(go(a, domain, env)? || go(b, domain, env)?),
            Formula::Exists(v, g) => {
                let saved = env.get(v).copied();
                let mut found = false;
                for &a in domain {
                    env.insert(*v, a);
                    if go(g, domain, env)? {
                        found = true;
                        break;
                    }
                }
                match saved {
                    Some(s) => env.insert(*v, s),
                    None => env.remove(v),
                };
                Some(found)
            }
            _ => None,
        }
    }
    let consts_ok = f.constants().iter().all(|c| c.to_u64().is_some_and(|n| domain.contains(&n)));
    if !consts_ok || !f.is_sentence() {
        return None;
    }
    go(f, domain, &mut HashMap::new())
}

fn arith_term(t: &Term, env: &HashMap<Var, u64>) -> Option<u64> {
    match t {
        Term::Var(v) => env.get(v).copied(),
        Term::Zero => Some(0),
        Term::Succ(a) => arith_term(a, env)?.checked_add(1),
        Term::Add(a, b) => arith_term(a, env)?.checked_add(arith_term(b, env)?),
        Term::Mul(a, b) => arith_term(a, env)?.checked_mul(arith_term(b, env)?),
        Term::Const(_) => None,
    }
}

/// Truth in the naturals with quantifiers over `0..bound`; `AckMem` is the bit test.
pub fn naive_arith_truth(f: &Formula, bound: u64) -> Option<bool> {
    fn go(f: &Formula, bound: u64, env: &mut HashMap<Var, u64>) -> Option<bool> {
        match f {
            Formula::Eq(s, t) => Some(arith_term(s, env)? == arith_term(t, env)?),
            Formula::AckMem(s, t) => Some(bit_mem(arith_term(s, env)?, arith_term(t, env)?)),
            Formula::Not(g) => go(g, bound, env).map(|b| !b),
            Formula::Or(a, b) => Some(go(a, bound, env)? || go(b, bound, env)?),
            Formula::Exists(v, g) => {
                let saved = env.get(v).copied();
                let mut found = false;
                for a in 0..bound {
                    env.insert(*v, a);
                    if go(g, bound, env)? {
                        found = true;
                        break;
                    }
                }
                match saved {
                    Some(s) => env.insert(*v, s),
                    None => env.remove(v),
                };
                Some(found)
            }
            _ => None,
        }
    }
    go(f, bound, &mut HashMap::new())
}

/// Nesting depth of braces in a printed set, minus one: the rank of `{…}` notation.
pub fn brace_rank(printed: &str) -> u32 {
    let (mut depth, mut max) = (0i32, 0i32);
    for ch in printed.chars() {
        match ch {
            '{' => {
                depth += 1;
                max = max.max(depth);
            }
            '}' => depth -= 1,
            _ => {}
        }
    }
    (max - 1).max(0) as u32
}
