//! Answering parity queries and recovering the marked set from the answers.
//!
//! Two decoders are provided. [`decode_brute`] works for any plan by
//! scanning candidate sets. [`decode_algebraic`] applies to moment-built
//! plans: it recovers the power sums `S_1..S_2d` of the marked field
//! elements, synthesizes the error-locator polynomial with Berlekamp-Massey
//! and scans the column elements for its roots.

use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::construction::QueryPlan;
use crate::error::{Error, Result};
use crate::f2linalg::BitVector;
use crate::gf2m::{FieldElement, FieldSpec};
use crate::subsets::ColumnTable;

/// A set of marked items, as sorted 1-based indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarkedSet(Vec<usize>);

impl MarkedSet {
    /// Sorts and deduplicates `items`.
    pub fn new(mut items: Vec<usize>) -> Self {
        items.sort_unstable();
        items.dedup();
        MarkedSet(items)
    }

    pub fn empty() -> Self {
        MarkedSet(Vec::new())
    }

    pub(crate) fn from_zero_based(indices: &[usize]) -> Self {
        MarkedSet(indices.iter().map(|i| i + 1).collect())
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn symmetric_difference(&self, other: &MarkedSet) -> MarkedSet {
        let mut out: Vec<usize> = self.0.iter().filter(|i| !other.contains(**i)).copied().collect();
        out.extend(other.0.iter().filter(|i| !self.contains(**i)));
        MarkedSet::new(out)
    }

    /// Characteristic vector over `[n]`.
    pub fn to_bit_vector(&self, n: usize) -> Result<BitVector> {
        self.check_range(n)?;
        let zero_based: Vec<usize> = self.0.iter().map(|i| i - 1).collect();
        Ok(BitVector::from_support(n, &zero_based))
    }

    fn check_range(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i > n) {
            Some(&index) => Err(Error::IndexOutOfRange { index, n }),
            None => Ok(()),
        }
    }

    /// Parses `"1,5,9"`; the empty string is the empty set.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(MarkedSet::empty());
        }
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidParameters(format!("bad item index {t:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(MarkedSet::new)
    }
}

impl fmt::Display for MarkedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// Parity answers, one bit per query.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome(pub BitVector);

impl Syndrome {
    pub fn bits(&self) -> &BitVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(s: &str) -> Result<Self> {
        BitVector::parse_bit_string(s.trim()).map(Syndrome)
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for Syndrome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_bit_string())
    }
}

impl<'de> Deserialize<'de> for Syndrome {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Syndrome::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Bit `i` is `|A_i ∩ X| mod 2`.
pub fn answer_queries(plan: &QueryPlan, marked: &MarkedSet) -> Result<Syndrome> {
    marked.check_range(plan.n())?;
    let mut s = BitVector::zeros(plan.f());
    for &i in marked.items() {
        s.xor_assign(plan.column(i - 1));
    }
    Ok(Syndrome(s))
}

fn check_length(plan: &QueryPlan, s: &Syndrome) -> Result<()> {
    if s.len() != plan.f() {
        return Err(Error::DimensionMismatch { expected: plan.f(), actual: s.len() });
    }
    Ok(())
}

/// First set of at most `d` items, by size and then lexicographically,
/// whose answers equal `s`. `None` when no such set exists.
pub fn decode_brute(plan: &QueryPlan, s: &Syndrome) -> Result<Option<MarkedSet>> {
    check_length(plan, s)?;
    let table = ColumnTable::new(plan.columns(), plan.f());
    let target = table.pack(s.bits());
    for k in 0..=plan.d().min(plan.n()) {
        let found = table.for_each_subset(k, |subset, acc| {
            if acc == target.as_slice() {
                ControlFlow::Break(MarkedSet::from_zero_based(subset))
            } else {
                ControlFlow::Continue(())
            }
        });
        if let ControlFlow::Break(set) = found {
            return Ok(Some(set));
        }
    }
    Ok(None)
}

/// Power sums `S_1..S_2d` of the marked items' field elements.
///
/// Odd sums are read off the moment rows, which are recovered from the
/// answers through the plan's recorded row transform; even sums follow
/// from `S_2k = S_k^2`.
pub fn field_syndromes(plan: &QueryPlan, s: &Syndrome) -> Result<Vec<FieldElement>> {
    check_length(plan, s)?;
    let (Some(field), Some(map)) = (plan.field(), plan.moment_map()) else {
        return Err(Error::MissingFieldMetadata);
    };
    let m = field.degree() as usize;
    let d = plan.d();
    let moments = map.matvec(s.bits())?;
    let mut sums = Vec::with_capacity(2 * d);
    for k in 1..=2 * d {
        let value = if k % 2 == 1 {
            let block = (k - 1) / 2;
            let bits = (0..m).filter(|&i| moments.get(block * m + i)).fold(0u32, |acc, i| acc | 1 << i);
            FieldElement(bits)
        } else {
            field.square(sums[k / 2 - 1])
        };
        sums.push(value);
    }
    Ok(sums)
}

/// Shortest linear recurrence generating `seq`: returns the connection
/// polynomial `C(x) = 1 + c_1 x + ... ` (low degree first) and its length `L`.
pub fn berlekamp_massey(field: &FieldSpec, seq: &[FieldElement]) -> (Vec<FieldElement>, usize) {
    let mut c = vec![FieldElement::ONE];
    let mut b = vec![FieldElement::ONE];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last_disc = FieldElement::ONE;

    for n in 0..seq.len() {
        let mut disc = seq[n];
        for i in 1..=len.min(c.len() - 1) {
            disc = field.add(disc, field.mul(c[i], seq[n - i]));
        }
        if disc.is_zero() {
            shift += 1;
            continue;
        }
        let coef = field.div(disc, last_disc).expect("previous discrepancy is nonzero");
        let previous = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, FieldElement::ZERO);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + shift] = field.add(c[i + shift], field.mul(coef, bi));
        }
        if 2 * len <= n {
            len = n + 1 - len;
            b = previous;
            last_disc = disc;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    debug_assert!(c.len() <= len + 1);
    (c, len)
}

/// Algebraic decoding for moment-built plans. Returns `None` when the
/// locator has more than `d` roots' worth of degree, its roots are not all
/// column elements, or the located set does not reproduce `s`.
pub fn decode_algebraic(plan: &QueryPlan, s: &Syndrome) -> Result<Option<MarkedSet>> {
    let sums = field_syndromes(plan, s)?;
    let field = plan.field().ok_or(Error::MissingFieldMetadata)?;
    let (locator, len) = berlekamp_massey(field, &sums);
    if len > plan.d() {
        return Ok(None);
    }
    // x^L C(1/x) has the marked elements themselves as roots
    let mut reversed = vec![FieldElement::ZERO; len + 1];
    for (i, &c) in locator.iter().enumerate() {
        reversed[len - i] = c;
    }
    let roots: Vec<usize> = plan
        .column_elements()
        .iter()
        .enumerate()
        .filter(|(_, &xi)| {
            reversed.iter().rev().fold(FieldElement::ZERO, |acc, &c| field.add(field.mul(acc, xi), c)).is_zero()
        })
        .map(|(j, _)| j)
        .collect();
    if roots.len() != len {
        return Ok(None);
    }
    let candidate = MarkedSet::from_zero_based(&roots);
    if answer_queries(plan, &candidate)? != *s {
        return Ok(None);
    }
    Ok(Some(candidate))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoder {
    Brute,
    Algebraic,
}

impl Decoder {
    pub fn decode(self, plan: &QueryPlan, s: &Syndrome) -> Result<Option<MarkedSet>> {
        match self {
            Decoder::Brute => decode_brute(plan, s),
            Decoder::Algebraic => decode_algebraic(plan, s),
        }
    }
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decoder::Brute => "brute",
            Decoder::Algebraic => "algebraic",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_query_plan;
    use crate::f2linalg::BitMatrix;

    fn set(items: &[usize]) -> MarkedSet {
        MarkedSet::new(items.to_vec())
    }

    #[test]
    fn answer_examples() {
        let plan = build_query_plan(7, 1).unwrap();
        assert!(answer_queries(&plan, &MarkedSet::empty()).unwrap().bits().is_zero());
        // 5 is in {1,3,5,7} and {4,5,6,7} but not {2,3,6,7}
        assert_eq!(answer_queries(&plan, &set(&[5])).unwrap().to_string(), "101");
        assert!(matches!(answer_queries(&plan, &set(&[8])), Err(Error::IndexOutOfRange { index: 8, n: 7 })));
        assert!(answer_queries(&plan, &set(&[0])).is_err());
    }

    #[test]
    fn brute_examples() {
        let plan = build_query_plan(7, 1).unwrap();
        let zero = Syndrome(BitVector::zeros(3));
        assert_eq!(decode_brute(&plan, &zero).unwrap(), Some(MarkedSet::empty()));
        assert_eq!(decode_brute(&plan, &Syndrome::parse("101").unwrap()).unwrap(), Some(set(&[5])));
        assert!(decode_brute(&plan, &Syndrome::parse("10").unwrap()).is_err());
    }

    #[test]
    fn brute_no_match() {
        // two queries over three items: {1}, {2}; item 3 is never queried.
        // d = 1: syndrome 11 would need {1, 2}.
        let m = BitMatrix::from_rows(3, vec![BitVector::from_u64(3, 0b001), BitVector::from_u64(3, 0b010)]).unwrap();
        let plan = QueryPlan::from_matrix(3, 1, m).unwrap();
        let s = answer_queries(&plan, &set(&[1, 2])).unwrap();
        // brute scan confirms no set of size <= 1 hits it
        for x in [vec![], vec![1], vec![2], vec![3]] {
            assert_ne!(answer_queries(&plan, &set(&x)).unwrap(), s);
        }
        assert_eq!(decode_brute(&plan, &s).unwrap(), None);
    }

    #[test]
    fn field_syndrome_examples() {
        let plan = build_query_plan(31, 3).unwrap();
        let field = *plan.field().unwrap();
        let zero = answer_queries(&plan, &MarkedSet::empty()).unwrap();
        assert!(field_syndromes(&plan, &zero).unwrap().iter().all(|x| x.is_zero()));

        let s = answer_queries(&plan, &set(&[9])).unwrap();
        let sums = field_syndromes(&plan, &s).unwrap();
        for (k, sk) in sums.iter().enumerate() {
            assert_eq!(*sk, field.pow(FieldElement(9), k as u64 + 1));
        }

        let s = answer_queries(&plan, &set(&[4, 17])).unwrap();
        let sums = field_syndromes(&plan, &s).unwrap();
        let s1 = field.add(FieldElement(4), FieldElement(17));
        assert_eq!(sums[0], s1);
        assert_eq!(sums[1], field.square(s1));
        let direct = field.add(field.pow(FieldElement(4), 2), field.pow(FieldElement(17), 2));
        assert_eq!(sums[1], direct);
    }

    #[test]
    fn algebraic_requires_field() {
        let plan = QueryPlan::from_matrix(2, 1, BitMatrix::identity(2)).unwrap();
        let s = Syndrome(BitVector::zeros(2));
        assert!(matches!(decode_algebraic(&plan, &s), Err(Error::MissingFieldMetadata)));
        assert!(decode_brute(&plan, &s).unwrap().unwrap().is_empty());
    }

    #[test]
    fn algebraic_roundtrips_small_plan() {
        let plan = build_query_plan(15, 2).unwrap();
        assert_eq!(decode_algebraic(&plan, &Syndrome(BitVector::zeros(plan.f()))).unwrap(), Some(MarkedSet::empty()));
        for a in 1..=15 {
            for b in a..=15 {
                let x = set(&[a, b]);
                let s = answer_queries(&plan, &x).unwrap();
                assert_eq!(decode_algebraic(&plan, &s).unwrap(), Some(x.clone()));
                assert_eq!(decode_brute(&plan, &s).unwrap(), Some(x));
            }
        }
    }

    #[test]
    fn algebraic_reports_no_match_for_too_many() {
        let plan = build_query_plan(15, 2).unwrap();
        let x = set(&[1, 2, 4]);
        let s = answer_queries(&plan, &x).unwrap();
        assert_eq!(decode_algebraic(&plan, &s).unwrap(), decode_brute(&plan, &s).unwrap());
    }

    #[test]
    fn berlekamp_massey_finds_locator() {
        let field = FieldSpec::new(4).unwrap();
        let xs = [FieldElement(3), FieldElement(7), FieldElement(12)];
        let sums: Vec<_> = (1..=6).map(|k| crate::construction::power_sum(&field, &xs, k)).collect();
        let (c, len) = berlekamp_massey(&field, &sums);
        assert_eq!(len, 3);
        for x in xs {
            let inv = field.inv(x).unwrap();
            let value = c.iter().rev().fold(FieldElement::ZERO, |acc, &ci| field.add(field.mul(acc, inv), ci));
            assert!(value.is_zero());
        }
    }

    #[test]
    fn marked_set_parse_and_difference() {
        assert_eq!(MarkedSet::parse("5, 1,5").unwrap(), set(&[1, 5]));
        assert!(MarkedSet::parse("").unwrap().is_empty());
        assert!(MarkedSet::parse("1,x").is_err());
        assert_eq!(set(&[1, 2, 3]).symmetric_difference(&set(&[2, 4])), set(&[1, 3, 4]));
        assert_eq!(set(&[3, 1]).to_string(), "{1, 3}");
    }
}
