//! Hereditarily finite sets under Ackermann coding.
//!
//! The code of a set is `Σ 2^code(t)` over its members `t`, so `x ∈ c` is the
//! bit test "bit `x` of `c` is 1". Every natural codes exactly one set, and a
//! member always has a smaller code than the set containing it, which makes
//! every initial segment of the naturals an ∈-transitive domain.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

/// Largest code bit-length `ack_encode` will materialize.
pub const MAX_CODE_BITS: u64 = 1 << 24;

/// Default ceiling on enumerated domain size.
pub const DEFAULT_DOMAIN_BUDGET: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HfError {
    #[error("domain {domain} has {required} elements, above the budget of {budget}")]
    Budget { domain: String, required: String, budget: usize },
    #[error("set code would need {bits} bits, above the limit of {limit}")]
    TooLarge { bits: String, limit: u64 },
    #[error("bad set literal at byte {pos}: {msg}")]
    Literal { pos: usize, msg: String },
    #[error("bad domain '{0}': expected rank:<r> or code:<n>")]
    DomainSpec(String),
}

/// The canonical name of a hereditarily finite set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AckCode(BigUint);

impl AckCode {
    pub fn new(v: BigUint) -> Self {
        AckCode(v)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_value(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn is_empty_set(&self) -> bool {
        self.0.is_zero()
    }

    /// `x ∈_Ack self`.
    pub fn contains(&self, x: &AckCode) -> bool {
        ack_mem(x, self)
    }

    /// Codes of the members, ascending.
    pub fn members(&self) -> Vec<AckCode> {
        let bits = self.0.bits();
        (0..bits).filter(|&i| self.0.bit(i)).map(|i| AckCode(BigUint::from(i))).collect()
    }

    pub fn member_count(&self) -> u64 {
        self.0.count_ones()
    }
}

impl From<u64> for AckCode {
    fn from(n: u64) -> Self {
        AckCode(BigUint::from(n))
    }
}

impl From<u32> for AckCode {
    fn from(n: u32) -> Self {
        AckCode(BigUint::from(n))
    }
}

impl From<usize> for AckCode {
    fn from(n: usize) -> Self {
        AckCode(BigUint::from(n))
    }
}

impl From<BigUint> for AckCode {
    fn from(n: BigUint) -> Self {
        AckCode(n)
    }
}

impl fmt::Display for AckCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for AckCode {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s).map(AckCode)
    }
}

impl serde::Serialize for AckCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for AckCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        AckCode::from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// A hereditarily finite set as an explicit tree. Children are kept sorted by
/// code and free of duplicates, so derived equality is extensional equality.
/// Trees are usable even when the code is too large to materialize.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HFSet {
    children: Vec<HFSet>,
}

impl HFSet {
    pub fn empty() -> Self {
        HFSet::default()
    }

    /// Build `{c₁, …, cₙ}`, sorting and deduplicating.
    pub fn from_children(children: impl IntoIterator<Item = HFSet>) -> Self {
        let mut children: Vec<HFSet> = children.into_iter().collect();
        children.sort();
        children.dedup();
        HFSet { children }
    }

    pub fn children(&self) -> &[HFSet] {
        &self.children
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.children.iter().any(|c| c == x)
    }

    /// `s ∪ {s}`.
    pub fn successor(&self) -> Self {
        HFSet::from_children(self.children.iter().cloned().chain(std::iter::once(self.clone())))
    }
}

/// Agrees with comparing codes: the set with the larger top member is larger,
/// because `2^k` exceeds any sum of distinct smaller powers of two.
impl Ord for HFSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let mut a = self.children.iter().rev();
        let mut b = other.children.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    o => return o,
                },
            }
        }
    }
}

impl PartialOrd for HFSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// `Σ_{t ∈ s} 2^code(t)`.
pub fn ack_encode(s: &HFSet) -> Result<AckCode, HfError> {
    let mut acc = BigUint::zero();
    for c in &s.children {
        let k = ack_encode(c)?;
        let bit = match k.to_u64() {
            Some(b) if b < MAX_CODE_BITS => b,
            _ => return Err(HfError::TooLarge { bits: format!("{} + 1", k), limit: MAX_CODE_BITS }),
        };
        acc.set_bit(bit, true);
    }
    Ok(AckCode(acc))
}

/// The set whose members decode the set bits of `n`.
pub fn ack_decode(n: &AckCode) -> HFSet {
    // Members are strictly smaller, and the bit positions are already ascending,
    // so no sorting is needed.
    HFSet { children: n.members().iter().map(ack_decode).collect() }
}

/// `x ∈_Ack c`: bit `x` of `c` is set.
pub fn ack_mem(x: &AckCode, c: &AckCode) -> bool {
    match x.to_u64() {
        Some(b) => c.0.bit(b),
        None => false,
    }
}

/// The set of all hereditary members of `s` (not including `s` itself).
pub fn transitive_closure(s: &HFSet) -> HFSet {
    let mut all = Vec::new();
    fn walk(s: &HFSet, out: &mut Vec<HFSet>) {
        for c in &s.children {
            if !out.contains(c) {
                out.push(c.clone());
                walk(c, out);
            }
        }
    }
    walk(s, &mut all);
    HFSet::from_children(all)
}

/// Code of the transitive closure, computed on codes directly.
pub fn transitive_closure_code(c: &AckCode) -> AckCode {
    let mut acc = BigUint::zero();
    let mut stack = c.members();
    while let Some(x) = stack.pop() {
        let b = x.to_u64().expect("member of a code is a bit position");
        if !acc.bit(b) {
            acc.set_bit(b, true);
            stack.extend(x.members());
        }
    }
    AckCode(acc)
}

/// Von Neumann rank: 0 for ∅, otherwise one more than the largest member rank.
pub fn rank(s: &HFSet) -> u32 {
    s.children.iter().map(|c| rank(c) + 1).max().unwrap_or(0)
}

/// Rank computed from the code. Rank is monotone in the code, so the largest
/// member (highest set bit) has the largest rank.
pub fn rank_of_code(c: &AckCode) -> u32 {
    let mut r = 0;
    let mut cur = c.0.clone();
    while !cur.is_zero() {
        r += 1;
        cur = BigUint::from(cur.bits() - 1);
    }
    r
}

/// `|V_r|`, or `None` if it is too large to represent (r ≥ 7).
pub fn v_size(r: u32) -> Option<BigUint> {
    let mut n = BigUint::zero();
    for _ in 0..r {
        let e = n.to_u64().filter(|&e| e <= MAX_CODE_BITS)?;
        n = BigUint::one() << e;
    }
    Some(n)
}

fn v_size_label(r: u32) -> String {
    match v_size(r) {
        Some(n) if n.bits() <= 64 => n.to_string(),
        Some(n) => format!("2^{}", n.bits() - 1),
        None => format!("2^(|V_{}|)", r - 1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    /// All sets of rank `< r`, i.e. `V_r`.
    RankCap { r: u32 },
    /// All sets with code `< n`.
    CodeCap { n: u64 },
}

impl DomainSpec {
    pub fn rank(r: u32) -> Self {
        DomainSpec::RankCap { r }
    }

    pub fn code(n: u64) -> Self {
        DomainSpec::CodeCap { n }
    }

    /// Number of elements, if representable.
    pub fn size(&self) -> Option<BigUint> {
        match self {
            DomainSpec::RankCap { r } => v_size(*r),
            DomainSpec::CodeCap { n } => Some(BigUint::from(*n)),
        }
    }

    pub fn contains(&self, c: &AckCode) -> bool {
        match self {
            DomainSpec::RankCap { r } => rank_of_code(c) < *r,
            DomainSpec::CodeCap { n } => c.value() < &BigUint::from(*n),
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::RankCap { r } => write!(f, "rank:{r}"),
            DomainSpec::CodeCap { n } => write!(f, "code:{n}"),
        }
    }
}

impl FromStr for DomainSpec {
    type Err = HfError;
    fn from_str(s: &str) -> Result<Self, HfError> {
        let bad = || HfError::DomainSpec(s.to_string());
        let (kind, num) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "rank" => Ok(DomainSpec::rank(num.parse().map_err(|_| bad())?)),
            "code" => Ok(DomainSpec::code(num.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// Ascending codes of the domain. Both kinds of domain are initial segments
/// of the naturals, since `V_r` is exactly the codes below `|V_r|`.
pub fn enumerate_domain(d: &DomainSpec, budget: usize) -> Result<Vec<AckCode>, HfError> {
    let over = |required: String| HfError::Budget { domain: d.to_string(), required, budget };
    let n = match d {
        DomainSpec::RankCap { r } => match v_size(*r).and_then(|n| n.to_usize()) {
            Some(n) if n <= budget => n,
            _ => return Err(over(v_size_label(*r))),
        },
        DomainSpec::CodeCap { n } => match usize::try_from(*n) {
            Ok(n) if n <= budget => n,
            _ => return Err(over(n.to_string())),
        },
    };
    Ok((0..n as u64).map(AckCode::from).collect())
}

/// Parse a set literal: `{}`, `{0, 1}`, or nested `{{}, {{}}}`. Bare
/// naturals inside braces name members by code.
pub fn parse_set_literal(text: &str) -> Result<HFSet, HfError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let s = read_set(bytes, &mut pos)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(HfError::Literal { pos, msg: "trailing input".into() });
    }
    Ok(s)
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn read_set(b: &[u8], pos: &mut usize) -> Result<HFSet, HfError> {
    skip_ws(b, pos);
    let err = |pos: usize, msg: &str| HfError::Literal { pos, msg: msg.into() };
    if b.get(*pos) != Some(&b'{') {
        return Err(err(*pos, "expected '{'"));
    }
    *pos += 1;
    let mut children = Vec::new();
    loop {
        skip_ws(b, pos);
        match b.get(*pos) {
            Some(b'}') => {
                *pos += 1;
                return Ok(HFSet::from_children(children));
            }
            Some(b'{') => children.push(read_set(b, pos)?),
            Some(c) if c.is_ascii_digit() => {
                let start = *pos;
                while *pos < b.len() && b[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                let digits = std::str::from_utf8(&b[start..*pos]).expect("ascii digits");
                children.push(ack_decode(&AckCode::from_str(digits).expect("digits parse")));
            }
            None => return Err(err(*pos, "unclosed '{'")),
            Some(_) => return Err(err(*pos, "expected a set, a code, or '}'")),
        }
        skip_ws(b, pos);
        match b.get(*pos) {
            Some(b',') => *pos += 1,
            Some(b'}') => {}
            None => return Err(err(*pos, "unclosed '{'")),
            Some(_) => return Err(err(*pos, "expected ',' or '}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(n: u64) -> AckCode {
        AckCode::from(n)
    }

    fn set(children: Vec<HFSet>) -> HFSet {
        HFSet::from_children(children)
    }

    #[test]
    fn encode_examples() {
        let e = HFSet::empty();
        assert_eq!(ack_encode(&e).unwrap(), code(0));
        assert_eq!(ack_encode(&set(vec![e.clone()])).unwrap(), code(1));
        let one = set(vec![e.clone()]);
        assert_eq!(ack_encode(&set(vec![e, one])).unwrap(), code(3));
    }

    #[test]
    fn decode_examples() {
        let e = HFSet::empty();
        let one = set(vec![e.clone()]);
        let two = set(vec![one.clone()]);
        assert_eq!(ack_decode(&code(0)), e);
        assert_eq!(ack_decode(&code(2)), two);
        // bits 1 and 2: codes 1 = {∅} and 2 = {{∅}}
        assert_eq!(ack_decode(&code(6)), set(vec![one.clone(), two]));
        // bits 1 and 3: codes 1 = {∅} and 3 = {∅,{∅}}
        let three = set(vec![e, one.clone()]);
        assert_eq!(ack_decode(&code(10)), set(vec![one, three]));
    }

    #[test]
    fn mem_examples() {
        assert!(ack_mem(&code(0), &code(1)));
        assert!(ack_mem(&code(1), &code(2)));
        assert!(!ack_mem(&code(2), &code(3)));
        assert!(!ack_mem(&AckCode::new(BigUint::one() << 80u32), &code(3)));
    }

    #[test]
    fn tc_examples() {
        assert_eq!(transitive_closure(&HFSet::empty()), HFSet::empty());
        let e = HFSet::empty();
        let one = set(vec![e.clone()]);
        let two = set(vec![one.clone()]);
        assert_eq!(transitive_closure(&two), set(vec![one, e]));
        assert_eq!(ack_encode(&transitive_closure(&ack_decode(&code(6)))).unwrap(), code(7));
        assert_eq!(ack_encode(&transitive_closure(&ack_decode(&code(10)))).unwrap(), code(11));
        for n in 0..2048u64 {
            let via_tree = ack_encode(&transitive_closure(&ack_decode(&code(n)))).unwrap();
            assert_eq!(transitive_closure_code(&code(n)), via_tree);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&HFSet::empty()), 0);
        assert_eq!(rank(&ack_decode(&code(2))), 2);
        assert_eq!(rank(&ack_decode(&code(3))), 2);
        for n in 0..4096u64 {
            assert_eq!(rank(&ack_decode(&code(n))), rank_of_code(&code(n)), "code {n}");
        }
    }

    #[test]
    fn domain_examples() {
        assert_eq!(enumerate_domain(&DomainSpec::rank(3), DEFAULT_DOMAIN_BUDGET).unwrap(), (0..4).map(code).collect::<Vec<_>>());
        assert_eq!(enumerate_domain(&DomainSpec::rank(4), DEFAULT_DOMAIN_BUDGET).unwrap().len(), 16);
        assert_eq!(enumerate_domain(&DomainSpec::code(5), DEFAULT_DOMAIN_BUDGET).unwrap(), (0..5).map(code).collect::<Vec<_>>());
        assert_eq!(enumerate_domain(&DomainSpec::rank(5), DEFAULT_DOMAIN_BUDGET).unwrap().len(), 65536);
        match enumerate_domain(&DomainSpec::rank(6), DEFAULT_DOMAIN_BUDGET) {
            Err(HfError::Budget { required, .. }) => assert_eq!(required, "2^65536"),
            other => panic!("expected budget error, got {other:?}"),
        }
        assert!(enumerate_domain(&DomainSpec::rank(9), DEFAULT_DOMAIN_BUDGET).is_err());
        assert!(enumerate_domain(&DomainSpec::code(17), 16).is_err());
    }

    #[test]
    fn rank_domain_matches_rank() {
        let dom = enumerate_domain(&DomainSpec::rank(4), DEFAULT_DOMAIN_BUDGET).unwrap();
        for n in 0..300u64 {
            let s = ack_decode(&code(n));
            assert_eq!(rank(&s) < 4, dom.contains(&code(n)));
        }
    }

    #[test]
    fn v_sizes() {
        let sizes: Vec<_> = (0..6).map(|r| v_size(r).unwrap()).collect();
        assert_eq!(sizes[..5], [0u32, 1, 2, 4, 16].map(BigUint::from));
        assert_eq!(sizes[5], BigUint::from(65536u32));
        assert_eq!(v_size(6).unwrap().bits(), 65537);
        assert_eq!(v_size(7), None);
    }

    #[test]
    fn tree_order_is_code_order() {
        for a in 0..300u64 {
            for b in 0..300u64 {
                assert_eq!(ack_decode(&code(a)).cmp(&ack_decode(&code(b))), a.cmp(&b));
            }
        }
    }

    #[test]
    fn big_ordinals_as_trees() {
        let mut o = HFSet::empty();
        for _ in 0..8 {
            o = o.successor();
        }
        assert_eq!(rank(&o), 8);
        assert!(matches!(ack_encode(&o), Err(HfError::TooLarge { .. })));
    }

    #[test]
    fn literals() {
        assert_eq!(ack_encode(&parse_set_literal("{}").unwrap()).unwrap(), code(0));
        assert_eq!(ack_encode(&parse_set_literal("{0,1}").unwrap()).unwrap(), code(3));
        assert_eq!(ack_encode(&parse_set_literal(" { {}, {{}} } ").unwrap()).unwrap(), code(3));
        assert_eq!(ack_encode(&parse_set_literal("{1, 1, 2}").unwrap()).unwrap(), code(6));
        assert!(matches!(parse_set_literal("{0,"), Err(HfError::Literal { .. })));
        assert!(matches!(parse_set_literal("{0} x"), Err(HfError::Literal { pos: 4, .. })));
    }

    #[test]
    fn domain_spec_text() {
        assert_eq!("rank:4".parse::<DomainSpec>().unwrap(), DomainSpec::rank(4));
        assert_eq!("code:16".parse::<DomainSpec>().unwrap(), DomainSpec::code(16));
        assert!("v4".parse::<DomainSpec>().is_err());
        assert_eq!(DomainSpec::rank(4).to_string(), "rank:4");
    }

    #[test]
    fn oversized_encode_is_an_error() {
        let huge_member = HFSet { children: vec![ack_decode(&code(40))] };
        let huge = HFSet { children: vec![huge_member] };
        // code(40) = 2^3 + 2^5: huge_member's code is 2^40, so huge needs 2^40 + 1 bits.
        assert!(matches!(ack_encode(&huge), Err(HfError::TooLarge { .. })));
    }
}
