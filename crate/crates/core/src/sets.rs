//! Finite sets of exact scalars and the sumset / product-set algebra on them.
//!
//! Every operation has an `i64` fast path that is taken when all inputs are
//! integers and no intermediate overflows; otherwise the computation is
//! redone in arbitrary precision. Both paths produce the same canonical set.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// Sorted, deduplicated finite set of [`ExactScalar`]s.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteScalarSet {
    elements: Vec<ExactScalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombineOp {
    Add,
    Subtract,
    Multiply,
}

impl CombineOp {
    fn apply(self, a: &ExactScalar, b: &ExactScalar) -> ExactScalar {
        match self {
            CombineOp::Add => a + b,
            CombineOp::Subtract => a - b,
            CombineOp::Multiply => a * b,
        }
    }

    fn apply_small(self, a: i64, b: i64) -> Option<i64> {
        match self {
            CombineOp::Add => a.checked_add(b),
            CombineOp::Subtract => a.checked_sub(b),
            CombineOp::Multiply => a.checked_mul(b),
        }
    }
}

// Below this many candidate elements the rayon overhead is not worth it.
const PAR_THRESHOLD: usize = 1 << 16;

fn finish_small(mut v: Vec<i64>) -> FiniteScalarSet {
    if v.len() >= PAR_THRESHOLD {
        v.par_sort_unstable();
    } else {
        v.sort_unstable();
    }
    v.dedup();
    FiniteScalarSet {
        elements: v.into_iter().map(ExactScalar::from).collect(),
    }
}

impl FiniteScalarSet {
    /// Builds the canonical set from arbitrary elements (duplicates allowed).
    pub fn from_elements<I: IntoIterator<Item = ExactScalar>>(items: I) -> Self {
        let mut elements: Vec<ExactScalar> = items.into_iter().collect();
        if elements.len() >= PAR_THRESHOLD {
            elements.par_sort_unstable();
        } else {
            elements.sort_unstable();
        }
        elements.dedup();
        FiniteScalarSet { elements }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(items: I) -> Self {
        finish_small(items.into_iter().collect())
    }

    pub fn singleton(x: ExactScalar) -> Self {
        FiniteScalarSet { elements: vec![x] }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ExactScalar] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExactScalar> {
        self.elements.iter()
    }

    pub fn into_elements(self) -> Vec<ExactScalar> {
        self.elements
    }

    pub fn contains(&self, x: &ExactScalar) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn is_subset_of(&self, other: &FiniteScalarSet) -> bool {
        self.first_missing_from(other).is_none()
    }

    /// The smallest element of `self` that is not in `other`.
    pub fn first_missing_from(&self, other: &FiniteScalarSet) -> Option<&ExactScalar> {
        // Both sides sorted: single merge pass.
        let mut j = 0;
        for x in &self.elements {
            while j < other.elements.len() && other.elements[j] < *x {
                j += 1;
            }
            if j == other.elements.len() || other.elements[j] != *x {
                return Some(x);
            }
        }
        None
    }

    /// All elements as `i64`, if every element is an integer that fits.
    pub fn to_small(&self) -> Option<Vec<i64>> {
        self.elements.iter().map(ExactScalar::to_i64).collect()
    }

    fn require_nonempty(&self, op: &'static str) -> Result<()> {
        if self.elements.is_empty() {
            Err(Error::EmptyInput(op))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for FiniteScalarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a FiniteScalarSet {
    type Item = &'a ExactScalar;
    type IntoIter = std::slice::Iter<'a, ExactScalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl FromIterator<ExactScalar> for FiniteScalarSet {
    fn from_iter<T: IntoIterator<Item = ExactScalar>>(iter: T) -> Self {
        FiniteScalarSet::from_elements(iter)
    }
}

/// `A − A`, computed from the ordered pairs `i < j` plus zero.
pub fn difference_set(a: &FiniteScalarSet) -> Result<FiniteScalarSet> {
    a.require_nonempty("difference_set")?;
    let n = a.len();
    if let Some(small) = a.to_small() {
        let mut out = Vec::with_capacity(n * (n - 1) + 1);
        out.push(0i64);
        let mut overflow = false;
        'outer: for i in 0..n {
            for j in (i + 1)..n {
                // Sorted input, so the difference is positive.
                match small[j].checked_sub(small[i]) {
                    Some(d) => {
                        out.push(d);
                        out.push(-d);
                    }
                    None => {
                        overflow = true;
                        break 'outer;
                    }
                }
            }
        }
        if !overflow {
            return Ok(finish_small(out));
        }
    }
    let e = a.elements();
    let mut out = Vec::with_capacity(n * (n - 1) + 1);
    out.push(ExactScalar::zero());
    for i in 0..n {
        for j in (i + 1)..n {
            let d = &e[j] - &e[i];
            out.push(-&d);
            out.push(d);
        }
    }
    Ok(FiniteScalarSet::from_elements(out))
}

/// `{a ∘ b : a ∈ A, b ∈ B}`.
pub fn pairwise_combine(
    a: &FiniteScalarSet,
    b: &FiniteScalarSet,
    op: CombineOp,
) -> Result<FiniteScalarSet> {
    a.require_nonempty("pairwise_combine")?;
    b.require_nonempty("pairwise_combine")?;
    if let (Some(sa), Some(sb)) = (a.to_small(), b.to_small()) {
        if let Some(out) = combine_small(&sa, &sb, op) {
            return Ok(finish_small(out));
        }
    }
    let out: Vec<ExactScalar> = if a.len() * b.len() >= PAR_THRESHOLD {
        a.elements
            .par_iter()
            .flat_map_iter(|x| b.elements.iter().map(move |y| op.apply(x, y)))
            .collect()
    } else {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| op.apply(x, y)))
            .collect()
    };
    Ok(FiniteScalarSet::from_elements(out))
}

// Largest output span, in bits, for the bitset sumset (32 MiB).
const BITSET_SPAN: u64 = 1 << 28;

/// `A + B` over sorted, deduplicated inputs by OR-ing shifted copies of the
/// larger set's bitmap. Returns the sorted result, or `None` when the span is
/// too wide for enumeration to lose.
fn sumset_bitset(a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
    let (big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let (big_lo, big_hi) = (*big.first()?, *big.last()?);
    let (small_lo, small_hi) = (*small.first()?, *small.last()?);
    let lo = big_lo.checked_add(small_lo)?;
    let hi = big_hi.checked_add(small_hi)?;
    let span = u64::try_from(i128::from(hi) - i128::from(lo) + 1).ok()?;
    let big_span = (i128::from(big_hi) - i128::from(big_lo) + 1) as u64;
    // Word operations against pairs enumerated and sorted.
    let words_cost = (big_span / 64 + 1).saturating_mul(small.len() as u64);
    if span > BITSET_SPAN || words_cost.saturating_mul(8) > (a.len() as u64).saturating_mul(b.len() as u64) {
        return None;
    }
    let mut src = vec![0u64; (big_span / 64 + 1) as usize];
    for &x in big {
        let k = (x - big_lo) as u64;
        src[(k / 64) as usize] |= 1 << (k % 64);
    }
    let mut out = vec![0u64; (span / 64 + 2) as usize];
    for &y in small {
        let shift = (y - small_lo) as u64;
        let (ws, bs) = ((shift / 64) as usize, (shift % 64) as u32);
        let dst = &mut out[ws..];
        if bs == 0 {
            for (d, &w) in dst.iter_mut().zip(&src) {
                *d |= w;
            }
        } else {
            for (i, &w) in src.iter().enumerate() {
                dst[i] |= w << bs;
                dst[i + 1] |= w >> (64 - bs);
            }
        }
    }
    let mut v = Vec::new();
    for (i, &w) in out.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let k = (i as u64) * 64 + u64::from(w.trailing_zeros());
            v.push(lo + k as i64);
            w &= w - 1;
        }
    }
    Some(v)
}

fn combine_small(a: &[i64], b: &[i64], op: CombineOp) -> Option<Vec<i64>> {
    match op {
        CombineOp::Add => {
            if let Some(v) = sumset_bitset(a, b) {
                return Some(v);
            }
        }
        CombineOp::Subtract => {
            let neg: Option<Vec<i64>> = b.iter().rev().map(|y| y.checked_neg()).collect();
            if let Some(v) = neg.and_then(|nb| sumset_bitset(a, &nb)) {
                return Some(v);
            }
        }
        CombineOp::Multiply => {}
    }
    if a.len() * b.len() >= PAR_THRESHOLD {
        let rows: Option<Vec<Vec<i64>>> = a
            .par_iter()
            .map(|&x| b.iter().map(|&y| op.apply_small(x, y)).collect())
            .collect();
        let rows = rows?;
        let mut out = Vec::with_capacity(a.len() * b.len());
        for r in rows {
            out.extend(r);
        }
        Some(out)
    } else {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for &x in a {
            for &y in b {
                out.push(op.apply_small(x, y)?);
            }
        }
        Some(out)
    }
}

/// `mA − nA`, folded left: `((A + A) + … ) − A − …`.
pub fn iterated_combination(m: usize, n: usize, a: &FiniteScalarSet) -> Result<FiniteScalarSet> {
    if m + n == 0 {
        return Err(Error::ZeroFold);
    }
    a.require_nonempty("iterated_combination")?;
    let (mut acc, adds, subs) = if m > 0 {
        (a.clone(), m - 1, n)
    } else {
        (dilate(&ExactScalar::from(-1), a)?, 0, n - 1)
    };
    for _ in 0..adds {
        acc = pairwise_combine(&acc, a, CombineOp::Add)?;
    }
    for _ in 0..subs {
        acc = pairwise_combine(&acc, a, CombineOp::Subtract)?;
    }
    Ok(acc)
}

/// `{λ}A = {λa : a ∈ A}`.
pub fn dilate(lambda: &ExactScalar, a: &FiniteScalarSet) -> Result<FiniteScalarSet> {
    a.require_nonempty("dilate")?;
    if let (Some(l), Some(sa)) = (lambda.to_i64(), a.to_small()) {
        if let Some(out) = sa.iter().map(|&x| x.checked_mul(l)).collect::<Option<Vec<_>>>() {
            return Ok(finish_small(out));
        }
    }
    Ok(a.iter().map(|x| lambda * x).collect())
}

/// `A² = {a² : a ∈ A}`.
pub fn elementwise_square(a: &FiniteScalarSet) -> Result<FiniteScalarSet> {
    a.require_nonempty("elementwise_square")?;
    if let Some(sa) = a.to_small() {
        if let Some(out) = sa.iter().map(|&x| x.checked_mul(x)).collect::<Option<Vec<_>>>() {
            return Ok(finish_small(out));
        }
    }
    Ok(a.iter().map(ExactScalar::square).collect())
}

/// `AB + C = {ab + c : a ∈ A, b ∈ B, c ∈ C}`, computed as `(AB) + C`.
pub fn ab_plus_c_set(
    a: &FiniteScalarSet,
    b: &FiniteScalarSet,
    c: &FiniteScalarSet,
) -> Result<FiniteScalarSet> {
    a.require_nonempty("ab_plus_c_set")?;
    b.require_nonempty("ab_plus_c_set")?;
    c.require_nonempty("ab_plus_c_set")?;
    let ab = pairwise_combine(a, b, CombineOp::Multiply)?;
    pairwise_combine(&ab, c, CombineOp::Add)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn set(v: &[i64]) -> FiniteScalarSet {
        FiniteScalarSet::from_integers(v.iter().copied())
    }

    fn q(s: &str) -> ExactScalar {
        s.parse().unwrap()
    }

    // Naive enumeration oracles, independent of the fast paths above.
    fn naive2(a: &FiniteScalarSet, b: &FiniteScalarSet, f: impl Fn(&ExactScalar, &ExactScalar) -> ExactScalar) -> FiniteScalarSet {
        let mut out = BTreeSet::new();
        for x in a {
            for y in b {
                out.insert(f(x, y));
            }
        }
        FiniteScalarSet::from_elements(out)
    }

    #[test]
    fn difference_set_examples() {
        assert_eq!(difference_set(&set(&[0])).unwrap(), set(&[0]));
        assert_eq!(difference_set(&set(&[0, 1, 3])).unwrap(), set(&[-3, -2, -1, 0, 1, 2, 3]));
        for n in 1..=64 {
            let ap = FiniteScalarSet::from_integers(0..n);
            assert_eq!(difference_set(&ap).unwrap().len(), (2 * n - 1) as usize);
        }
        assert_eq!(difference_set(&FiniteScalarSet::default()), Err(Error::EmptyInput("difference_set")));
    }

    #[test]
    fn pairwise_examples() {
        assert_eq!(
            pairwise_combine(&set(&[0, 1, 3]), &set(&[0, 1, 3]), CombineOp::Add).unwrap(),
            set(&[0, 1, 2, 3, 4, 6])
        );
        assert_eq!(pairwise_combine(&set(&[1, 2]), &set(&[1]), CombineOp::Multiply).unwrap(), set(&[1, 2]));
        assert_eq!(
            pairwise_combine(&set(&[0, 1]), &set(&[0, 1]), CombineOp::Subtract).unwrap(),
            set(&[-1, 0, 1])
        );
        assert!(pairwise_combine(&set(&[]), &set(&[1]), CombineOp::Add).is_err());
    }

    #[test]
    fn iterated_examples() {
        assert_eq!(iterated_combination(1, 0, &set(&[1, 2])).unwrap(), set(&[1, 2]));
        assert_eq!(iterated_combination(2, 0, &set(&[0, 1, 3])).unwrap(), set(&[0, 1, 2, 3, 4, 6]));
        assert_eq!(iterated_combination(2, 2, &set(&[0, 1])).unwrap(), set(&[-2, -1, 0, 1, 2]));
        assert_eq!(iterated_combination(0, 2, &set(&[1, 5])).unwrap(), set(&[-10, -6, -2]));
        assert_eq!(iterated_combination(0, 0, &set(&[1])), Err(Error::ZeroFold));
        assert!(iterated_combination(1, 1, &set(&[])).is_err());
    }

    #[test]
    fn dilate_square_abc_examples() {
        assert_eq!(dilate(&q("1"), &set(&[2, 5])).unwrap(), set(&[2, 5]));
        assert_eq!(dilate(&q("0"), &set(&[2, 5])).unwrap(), set(&[0]));
        assert_eq!(dilate(&q("2"), &set(&[1, 3])).unwrap(), set(&[2, 6]));
        assert_eq!(dilate(&q("1/2"), &set(&[1, 3])).unwrap().to_string(), "{1/2, 3/2}");

        assert_eq!(elementwise_square(&set(&[0])).unwrap(), set(&[0]));
        assert_eq!(elementwise_square(&set(&[-2, 2])).unwrap(), set(&[4]));
        assert_eq!(elementwise_square(&set(&[-1, 0, 1])).unwrap(), set(&[0, 1]));

        assert_eq!(ab_plus_c_set(&set(&[1]), &set(&[1]), &set(&[0])).unwrap(), set(&[1]));
        assert_eq!(ab_plus_c_set(&set(&[1, 2]), &set(&[1, 2]), &set(&[0])).unwrap(), set(&[1, 2, 4]));
        // {2}·{0,1,4} = {0,2,8}; adding {0,1,4} cannot reach 5.
        let d2 = set(&[0, 1, 4]);
        assert_eq!(
            ab_plus_c_set(&set(&[2]), &d2, &d2).unwrap(),
            set(&[0, 1, 2, 3, 4, 6, 8, 9, 12])
        );
    }

    #[test]
    fn bitset_sumset_edges() {
        // Whole-word shifts and spans straddling word boundaries.
        let a = FiniteScalarSet::from_integers((0..200).map(|i| 3 * i));
        let b = FiniteScalarSet::from_integers([0, 64, 128, 129, 191]);
        let naive: Vec<i64> = {
            let mut v: Vec<i64> = (0..200).flat_map(|i| [0, 64, 128, 129, 191].map(|y| 3 * i + y)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        assert_eq!(pairwise_combine(&a, &b, CombineOp::Add).unwrap(), FiniteScalarSet::from_integers(naive));
        assert!(sumset_bitset(&[0, 1 << 40], &[0, 1]).is_none());
        assert!(sumset_bitset(&[i64::MAX], &[0, 1]).is_none());
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = set(&[i64::MAX - 1, i64::MAX]);
        let s = pairwise_combine(&big, &big, CombineOp::Add).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.elements()[2].to_string(), "18446744073709551614");
        let d = difference_set(&set(&[i64::MIN, i64::MAX])).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.elements()[2].to_string(), "18446744073709551615");
        let sq = elementwise_square(&set(&[i64::MAX])).unwrap();
        assert!(sq.to_small().is_none());
        assert_eq!(dilate(&q("3"), &set(&[i64::MAX])).unwrap().len(), 1);
    }

    #[test]
    fn subset_checks() {
        let a = set(&[1, 3]);
        let b = set(&[0, 1, 2, 3]);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert_eq!(b.first_missing_from(&a), Some(&ExactScalar::from(0)));
    }

    fn scalar_strategy() -> impl Strategy<Value = ExactScalar> {
        prop_oneof![
            (-50i64..50).prop_map(ExactScalar::from),
            ((-50i64..50), (1i64..7)).prop_map(|(n, d)| ExactScalar::new(n.into(), d.into()).unwrap()),
        ]
    }

    fn set_strategy(max: usize) -> impl Strategy<Value = FiniteScalarSet> {
        prop::collection::vec(scalar_strategy(), 1..=max).prop_map(FiniteScalarSet::from_elements)
    }

    proptest! {
        #[test]
        fn difference_set_matches_subtract_combine(a in set_strategy(12)) {
            let d = difference_set(&a).unwrap();
            prop_assert_eq!(&d, &pairwise_combine(&a, &a, CombineOp::Subtract).unwrap());
            prop_assert!(d.contains(&ExactScalar::zero()));
            for x in &d {
                prop_assert!(d.contains(&-x));
            }
            let n = a.len();
            prop_assert!(d.len() <= n * n - n + 1);
        }

        #[test]
        fn operations_match_naive_enumeration(
            a in set_strategy(12), b in set_strategy(12), c in set_strategy(12),
        ) {
            prop_assert_eq!(pairwise_combine(&a, &b, CombineOp::Add).unwrap(), naive2(&a, &b, |x, y| x + y));
            prop_assert_eq!(pairwise_combine(&a, &b, CombineOp::Subtract).unwrap(), naive2(&a, &b, |x, y| x - y));
            prop_assert_eq!(pairwise_combine(&a, &b, CombineOp::Multiply).unwrap(), naive2(&a, &b, |x, y| x * y));
            let mut abc = BTreeSet::new();
            for x in &a { for y in &b { for z in &c { abc.insert(&(x * y) + z); } } }
            let abc = FiniteScalarSet::from_elements(abc);
            prop_assert_eq!(ab_plus_c_set(&a, &b, &c).unwrap(), abc);
            let sq: BTreeSet<_> = a.iter().map(|x| x * x).collect();
            prop_assert_eq!(elementwise_square(&a).unwrap(), FiniteScalarSet::from_elements(sq));
            let sq = elementwise_square(&a).unwrap();
            prop_assert!(sq.len() <= a.len() && 2 * sq.len() >= a.len());
            prop_assert!(sq.iter().all(|x| !x.is_negative()));
            prop_assert!(pairwise_combine(&a, &b, CombineOp::Multiply).unwrap().len() <= a.len() * b.len());
        }

        #[test]
        fn iterated_combination_grows(a in set_strategy(5), m in 0usize..3, n in 0usize..3) {
            prop_assume!(m + n >= 1);
            let s = iterated_combination(m, n, &a).unwrap();
            prop_assert!(s.len() >= a.len());
            // Independent route: direct enumeration of signed sums.
            let mut acc: BTreeSet<ExactScalar> = BTreeSet::new();
            acc.insert(ExactScalar::zero());
            for k in 0..(m + n) {
                let mut next = BTreeSet::new();
                for x in &acc {
                    for y in &a {
                        next.insert(if k < m { x + y } else { x - y });
                    }
                }
                acc = next;
            }
            prop_assert_eq!(s, FiniteScalarSet::from_elements(acc));
        }

        #[test]
        fn dense_sums_match_enumeration(
            a in prop::collection::btree_set(-300i64..300, 1..200),
            b in prop::collection::btree_set(-5000i64..-4000, 1..300),
        ) {
            let (sa, sb) = (FiniteScalarSet::from_integers(a.clone()), FiniteScalarSet::from_integers(b.clone()));
            let sum: BTreeSet<i64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
            let diff: BTreeSet<i64> = a.iter().flat_map(|x| b.iter().map(move |y| x - y)).collect();
            prop_assert_eq!(pairwise_combine(&sa, &sb, CombineOp::Add).unwrap(), FiniteScalarSet::from_integers(sum));
            prop_assert_eq!(
                pairwise_combine(&sa, &sb, CombineOp::Subtract).unwrap(),
                FiniteScalarSet::from_integers(diff)
            );
        }

        #[test]
        fn dilate_distributes_over_sum(a in set_strategy(10), l in scalar_strategy()) {
            let lhs = dilate(&l, &pairwise_combine(&a, &a, CombineOp::Add).unwrap()).unwrap();
            let la = dilate(&l, &a).unwrap();
            let rhs = pairwise_combine(&la, &la, CombineOp::Add).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(la.len(), if l.is_zero() { 1 } else { a.len() });
        }
    }
}
