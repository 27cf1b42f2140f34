//! Partitions, two-row Kostka numbers and Weyl-module bookkeeping for a
//! two-dimensional representation.
//!
//! `K(i, d, l)` is the multiplicity of `Sym^i V` in `(Sym^d V)^{⊗l}` for
//! `dim V = 2`. It is computed along four independent routes:
//!
//! * [`kostka_closed_form`]: alternating binomial sum,
//! * [`kostka_recursive`]: iterated Clebsch–Gordan, memoised in a [`KostkaTable`],
//! * [`kostka_generating`]: differences of coefficients of `(1 + x + … + x^d)^l`,
//! * [`kostka_tableau`]: exhaustive enumeration of semistandard tableaux.
//!
//! All values are exact arbitrary-precision integers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::binomial_signed;
use crate::error::{Error, Result};

/// Default cap on `d * l` for the tableau enumerator.
pub const DEFAULT_TABLEAU_BOUND: u64 = 24;

/// A weakly decreasing tuple of nonnegative integers with trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    /// Like [`Partition::new`] but also checks that the parts sum to `weight`.
    pub fn with_weight(parts: impl Into<Vec<u32>>, weight: u64) -> Result<Self> {
        let p = Self::new(parts)?;
        if p.weight() != weight {
            return Err(Error::InvalidPartition(format!(
                "{:?} has weight {}, expected {weight}",
                p.0,
                p.weight()
            )));
        }
        Ok(p)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    /// Number of nonzero rows.
    pub fn rows(&self) -> usize {
        self.0.len()
    }

    /// Part `i` (0-based), zero beyond the stored rows.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Multiplicities `i -> m_i` of `Sym^i` in a representation of a two-dimensional space.
/// Only nonzero entries are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiplicityVector(BTreeMap<u32, BigUint>);

impl MultiplicityVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// The irreducible `Sym^i` with multiplicity one.
    pub fn single(i: u32) -> Self {
        let mut v = Self::new();
        v.add(i, BigUint::one());
        v
    }

    pub fn add(&mut self, i: u32, m: BigUint) {
        if m.is_zero() {
            return;
        }
        *self.0.entry(i).or_default() += m;
    }

    pub fn get(&self, i: u32) -> BigUint {
        self.0.get(&i).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigUint)> {
        self.0.iter().map(|(&i, m)| (i, m))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total dimension `Σ (i + 1) m_i`.
    pub fn dimension(&self) -> BigUint {
        self.iter().map(|(i, m)| m * BigUint::from(i + 1)).sum()
    }

    /// Tensor with `Sym^j` by the Clebsch–Gordan rule.
    pub fn tensor_sym(&self, j: u32) -> Self {
        let mut out = Self::new();
        for (i, m) in self.iter() {
            for (k, _) in clebsch_gordan(i, j).iter() {
                out.add(k, m.clone());
            }
        }
        out
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, m)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}:{m}")?;
        }
        Ok(())
    }
}

fn outside_support(i: i64, d: u32, l: u32) -> bool {
    let dl = d as i64 * l as i64;
    i < 0 || i > dl || (dl - i) % 2 != 0
}

/// Alternating binomial sum for `K(i, d, l)`.
pub fn kostka_closed_form(i: i64, d: u32, l: u32) -> BigUint {
    assert!(d >= 1 && l >= 1, "kostka_closed_form needs d, l >= 1");
    if outside_support(i, d, l) {
        return BigUint::zero();
    }
    if l == 1 {
        // The sum below carries a binomial with lower index l - 2 = -1.
        return if i == d as i64 { BigUint::one() } else { BigUint::zero() };
    }
    let half = (d as i64 * l as i64 - i) / 2;
    let step = d as i64 + 1;
    let l = l as i64;
    let mut acc = BigInt::zero();
    let mut j = 0i64;
    while j * step <= half {
        let term = binomial_signed(l, j) * binomial_signed(half - j * step + l - 2, l - 2);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        j += 1;
    }
    debug_assert!(!acc.is_negative());
    acc.to_biguint().expect("Kostka numbers are nonnegative")
}

/// Memoised table of `K(i, d, l)` built by iterating the Clebsch–Gordan rule
/// in `l`. Safe for concurrent readers and insert-if-absent writers.
#[derive(Debug, Default)]
pub struct KostkaTable {
    rows: RwLock<HashMap<(u32, u32), Arc<Vec<BigUint>>>>,
}

impl KostkaTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide table used by the free functions.
    pub fn global() -> &'static KostkaTable {
        static TABLE: OnceLock<KostkaTable> = OnceLock::new();
        TABLE.get_or_init(KostkaTable::new)
    }

    pub fn get(&self, i: i64, d: u32, l: u32) -> BigUint {
        assert!(d >= 1 && l >= 1, "Kostka table needs d, l >= 1");
        if outside_support(i, d, l) {
            return BigUint::zero();
        }
        self.row(d, l)[i as usize].clone()
    }

    /// `K(0..=dl, d, l)` as a dense vector.
    pub fn row(&self, d: u32, l: u32) -> Arc<Vec<BigUint>> {
        if let Some(r) = self.rows.read().unwrap().get(&(d, l)) {
            return Arc::clone(r);
        }
        // Find the deepest cached row below l, then extend upward.
        let mut start = l;
        let mut prev: Option<Arc<Vec<BigUint>>> = None;
        while start > 1 {
            start -= 1;
            if let Some(r) = self.rows.read().unwrap().get(&(d, start)) {
                prev = Some(Arc::clone(r));
                break;
            }
        }
        let (mut cur, mut level) = match prev {
            Some(r) => (r, start),
            None => {
                let mut base = vec![BigUint::zero(); d as usize + 1];
                base[d as usize] = BigUint::one();
                let base = Arc::new(base);
                self.insert(d, 1, Arc::clone(&base));
                (base, 1)
            }
        };
        while level < l {
            let next = Arc::new(clebsch_gordan_step(&cur, d));
            level += 1;
            cur = self.insert(d, level, next);
        }
        cur
    }

    fn insert(&self, d: u32, l: u32, row: Arc<Vec<BigUint>>) -> Arc<Vec<BigUint>> {
        let mut guard = self.rows.write().unwrap();
        Arc::clone(guard.entry((d, l)).or_insert(row))
    }

    pub fn len(&self) -> usize {
        self.rows.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One step of `K(·, d, l) -> K(·, d, l + 1)`: `Sym^j ⊗ Sym^d` contains `Sym^i`
/// exactly when `|i - d| <= j <= i + d` with matching parity.
fn clebsch_gordan_step(prev: &[BigUint], d: u32) -> Vec<BigUint> {
    let top = prev.len() - 1 + d as usize;
    let mut next = vec![BigUint::zero(); top + 1];
    for (i, slot) in next.iter_mut().enumerate() {
        let lo = (i as i64 - d as i64).unsigned_abs() as usize;
        let hi = (i + d as usize).min(prev.len() - 1);
        let mut j = lo;
        while j <= hi {
            *slot += &prev[j];
            j += 2;
        }
    }
    next
}

/// `K(i, d, l)` from the memoised Clebsch–Gordan recursion.
pub fn kostka_recursive(i: i64, d: u32, l: u32) -> BigUint {
    KostkaTable::global().get(i, d, l)
}

/// Coefficients `C(j, d, l)` of `(1 + x + … + x^d)^l`, `j = 0..=dl`.
pub fn window_polynomial_coefficients(d: u32, l: u32) -> Vec<BigUint> {
    let mut coeffs = vec![BigUint::one()];
    for _ in 0..l {
        let len = coeffs.len() + d as usize;
        let mut next = vec![BigUint::zero(); len];
        for (j, c) in coeffs.iter().enumerate() {
            for k in 0..=d as usize {
                next[j + k] += c;
            }
        }
        coeffs = next;
    }
    coeffs
}

/// `K(i, d, l)` as `C(⌊(dl-i)/2⌋) - C(⌊(dl-i-1)/2⌋)` on the coefficients of
/// `(1 + x + … + x^d)^l`.
pub fn kostka_generating(i: i64, d: u32, l: u32) -> BigUint {
    assert!(d >= 1 && l >= 1, "kostka_generating needs d, l >= 1");
    if outside_support(i, d, l) {
        return BigUint::zero();
    }
    let coeffs = window_polynomial_coefficients(d, l);
    let at = |j: i64| -> BigInt {
        if j < 0 || j as usize >= coeffs.len() {
            BigInt::zero()
        } else {
            BigInt::from(coeffs[j as usize].clone())
        }
    };
    let dl = d as i64 * l as i64;
    let diff = at((dl - i).div_euclid(2)) - at((dl - i - 1).div_euclid(2));
    diff.to_biguint().expect("coefficient difference is nonnegative")
}

/// Counts semistandard tableaux of shape `((dl+i)/2, (dl-i)/2)` with content
/// `(d, …, d)` (`l` entries) by exhaustive enumeration, refusing when
/// `d * l` exceeds [`DEFAULT_TABLEAU_BOUND`].
pub fn kostka_tableau(i: i64, d: u32, l: u32) -> Result<BigUint> {
    kostka_tableau_bounded(i, d, l, DEFAULT_TABLEAU_BOUND)
}

pub fn kostka_tableau_bounded(i: i64, d: u32, l: u32, bound: u64) -> Result<BigUint> {
    let dl = d as u64 * l as u64;
    if dl > bound {
        return Err(Error::OracleBoundExceeded { dl, bound });
    }
    if outside_support(i, d, l) {
        return Ok(BigUint::zero());
    }
    let top = ((dl as i64 + i) / 2) as u32;
    let bottom = ((dl as i64 - i) / 2) as u32;
    Ok(BigUint::from(count_two_row_fillings(top, bottom, d, l)))
}

/// Place the `d` copies of each value `1..=l` in increasing order, choosing how
/// many land in the second row. Rows stay weakly increasing automatically; a
/// copy of `v` may enter the second row only above a first-row cell holding a
/// smaller value.
fn count_two_row_fillings(top: u32, bottom: u32, d: u32, l: u32) -> u64 {
    fn go(value: u32, r1: u32, r2: u32, top: u32, bottom: u32, d: u32, l: u32) -> u64 {
        if value > l {
            return u64::from(r1 == top && r2 == bottom);
        }
        let mut count = 0;
        for lower in 0..=d {
            let upper = d - lower;
            if r1 + upper > top || r2 + lower > bottom {
                continue;
            }
            // Column strictness: second-row cells r2..r2+lower sit below first-row
            // cells already filled with values < `value`.
            if r2 + lower > r1 {
                continue;
            }
            count += go(value + 1, r1 + upper, r2 + lower, top, bottom, d, l);
        }
        count
    }
    go(1, 0, 0, top, bottom, d, l)
}

/// `{ i -> K(i, d, l) }` for `0 <= i <= dl`.
pub fn tensor_power_multiplicities(d: u32, l: u32) -> MultiplicityVector {
    let row = KostkaTable::global().row(d, l);
    let mut out = MultiplicityVector::new();
    for (i, m) in row.iter().enumerate() {
        out.add(i as u32, m.clone());
    }
    out
}

/// `Sym^i ⊗ Sym^j = Sym^{|i-j|} ⊕ Sym^{|i-j|+2} ⊕ … ⊕ Sym^{i+j}`.
pub fn clebsch_gordan(i: u32, j: u32) -> MultiplicityVector {
    let mut out = MultiplicityVector::new();
    let mut k = i.abs_diff(j);
    while k <= i + j {
        out.add(k, BigUint::one());
        k += 2;
    }
    out
}

/// Multiplicity `c(l, i) = C(l, i) - C(l, i-1)` of `Sym^{l-2i}` in `V^{⊗l}`.
pub fn tensor_multiplicity_c(l: u32, i: u32) -> BigUint {
    let v = binomial_signed(l as i64, i as i64) - binomial_signed(l as i64, i as i64 - 1);
    v.to_biguint().unwrap_or_default()
}

/// Dimension of the Weyl module `S_λ V` for `dim V = m`.
pub fn weyl_dim(lambda: &Partition, m: usize) -> BigUint {
    if lambda.rows() > m {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for a in 0..m {
        for b in (a + 1)..m {
            let diff = lambda.part(a) as u64 - lambda.part(b) as u64 + (b - a) as u64;
            num *= diff;
            den *= (b - a) as u64;
        }
    }
    num / den
}

/// Dimension of the irreducible representation of the symmetric group indexed by `λ`.
pub fn irrep_multiplicity_m_lambda(lambda: &Partition) -> BigUint {
    let k = lambda.rows();
    let d = lambda.weight();
    let shifted: Vec<i64> = (0..k)
        .map(|i| lambda.part(i) as i64 + (k - 1 - i) as i64)
        .collect();
    let factorial = |n: u64| -> BigUint { (1..=n).fold(BigUint::one(), |acc, x| acc * x) };
    let mut num = factorial(d);
    for a in 0..k {
        for b in (a + 1)..k {
            num *= (shifted[a] - shifted[b]) as u64;
        }
    }
    let den = shifted
        .iter()
        .fold(BigUint::one(), |acc, &x| acc * factorial(x as u64));
    num / den
}

/// `K(i, d, l)` as an `f64`, exact for values below `2^53`.
pub fn kostka_f64(i: i64, d: u32, l: u32) -> f64 {
    kostka_recursive(i, d, l).to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn mv(entries: &[(u32, u64)]) -> MultiplicityVector {
        let mut v = MultiplicityVector::new();
        for &(i, m) in entries {
            v.add(i, big(m));
        }
        v
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(kostka_closed_form(0, 2, 5), big(6));
        assert_eq!(kostka_closed_form(6, 2, 3), big(1));
        assert_eq!(kostka_closed_form(2, 2, 3), big(3));
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(kostka_recursive(1, 1, 3), big(2));
        assert_eq!(kostka_recursive(3, 2, 4), big(0));
        assert_eq!(kostka_recursive(2, 2, 4), big(6));
    }

    #[test]
    fn generating_examples() {
        assert_eq!(kostka_generating(0, 2, 8), big(91));
        assert_eq!(kostka_generating(0, 1, 2), big(1));
        // dl = 9 is odd, so the even index 4 carries nothing; the odd
        // neighbours follow from (1 + x + x^2 + x^3)^3 = 1,3,6,10,12,12,10,6,3,1.
        assert_eq!(kostka_generating(4, 3, 3), big(0));
        assert_eq!(kostka_generating(1, 3, 3), big(2));
        assert_eq!(kostka_generating(3, 3, 3), big(4));
    }

    #[test]
    fn tableau_examples() {
        assert_eq!(kostka_tableau(2, 2, 2).unwrap(), big(1));
        assert_eq!(kostka_tableau(0, 1, 2).unwrap(), big(1));
        assert_eq!(kostka_tableau(6, 2, 4).unwrap(), big(3));
        assert_eq!(kostka_tableau(2, 2, 4).unwrap(), big(6));
    }

    #[test]
    fn tableau_refuses_past_bound() {
        assert_eq!(
            kostka_tableau(0, 5, 5),
            Err(Error::OracleBoundExceeded { dl: 25, bound: 24 })
        );
        assert!(kostka_tableau_bounded(1, 5, 5, 25).is_ok());
    }

    #[test]
    fn negative_and_large_indices_vanish() {
        for i in [-7i64, -2, -1, 7, 100] {
            assert!(kostka_closed_form(i, 2, 3).is_zero());
            assert!(kostka_recursive(i, 2, 3).is_zero());
            assert!(kostka_generating(i, 2, 3).is_zero());
            assert!(kostka_tableau(i, 2, 3).unwrap().is_zero());
        }
    }

    #[test]
    fn k02_sequence() {
        let seq: Vec<BigUint> = (1..=8).map(|l| kostka_closed_form(0, 2, l)).collect();
        let expected: Vec<BigUint> = [0u64, 1, 1, 3, 6, 15, 36, 91].iter().map(|&x| big(x)).collect();
        assert_eq!(seq, expected);
    }

    #[test]
    fn tensor_power_examples() {
        assert_eq!(tensor_power_multiplicities(2, 2), mv(&[(0, 1), (2, 1), (4, 1)]));
        assert_eq!(tensor_power_multiplicities(5, 1), mv(&[(5, 1)]));
        let t = tensor_power_multiplicities(2, 3);
        assert_eq!(t, mv(&[(0, 1), (2, 3), (4, 2), (6, 1)]));
        assert_eq!(t.dimension(), big(27));
        assert_eq!(t.to_string(), "0:1 2:3 4:2 6:1");
    }

    #[test]
    fn clebsch_gordan_examples() {
        assert_eq!(clebsch_gordan(2, 2), mv(&[(0, 1), (2, 1), (4, 1)]));
        assert_eq!(clebsch_gordan(7, 0), mv(&[(7, 1)]));
        assert_eq!(clebsch_gordan(3, 2), mv(&[(1, 1), (3, 1), (5, 1)]));
    }

    #[test]
    fn weyl_dim_examples() {
        for d in 0..6u32 {
            for m in 1..6usize {
                let p = Partition::new(vec![d]).unwrap();
                assert_eq!(weyl_dim(&p, m), crate::arith::binomial(m as i64 + d as i64 - 1, d as i64));
            }
        }
        assert_eq!(weyl_dim(&Partition::new(vec![1, 1, 1]).unwrap(), 2), big(0));
        assert_eq!(weyl_dim(&Partition::new(vec![3, 1]).unwrap(), 2), big(3));
        // Standard GL3 example: dim S_(2,1) C^3 = 8.
        assert_eq!(weyl_dim(&Partition::new(vec![2, 1]).unwrap(), 3), big(8));
    }

    #[test]
    fn m_lambda_examples() {
        assert_eq!(irrep_multiplicity_m_lambda(&Partition::new(vec![5]).unwrap()), big(1));
        assert_eq!(irrep_multiplicity_m_lambda(&Partition::new(vec![2, 1]).unwrap()), big(2));
        assert_eq!(irrep_multiplicity_m_lambda(&Partition::new(vec![1, 1]).unwrap()), big(1));
        // Hook-length check: S_4 standard representation.
        assert_eq!(irrep_multiplicity_m_lambda(&Partition::new(vec![3, 1]).unwrap()), big(3));
    }

    #[test]
    fn m_lambda_matches_c_for_two_rows() {
        for l in 1..=10u32 {
            for i in 0..=l / 2 {
                let p = Partition::new(vec![l - i, i]).unwrap();
                assert_eq!(irrep_multiplicity_m_lambda(&p), tensor_multiplicity_c(l, i));
            }
        }
    }

    #[test]
    fn partition_canonical_form() {
        let a = Partition::new(vec![3, 1, 0, 0]).unwrap();
        let b = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "(3,1)");
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::with_weight(vec![2, 2], 5).is_err());
        assert!(Partition::with_weight(vec![2, 2, 0], 4).is_ok());
    }

    #[test]
    fn table_is_shared_across_threads() {
        let table = KostkaTable::new();
        std::thread::scope(|s| {
            for d in 1..=4u32 {
                let t = &table;
                s.spawn(move || {
                    for l in (1..=6u32).rev() {
                        for i in 0..=(d * l) as i64 {
                            assert_eq!(t.get(i, d, l), kostka_closed_form(i, d, l));
                        }
                    }
                });
            }
        });
        assert_eq!(table.len(), 24);
    }
}
