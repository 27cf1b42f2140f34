use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::{compose, reduce, QuadForm};
use crate::arith::gcd;
use crate::error::{Error, Result};

pub const DEFAULT_DISCRIMINANT_BOUND: i64 = 1_000_000;

/// A phase `t` in `[0, 1)`, standing for `exp(2πi t)`.
type Phase = Ratio<i64>;

fn frac(x: Phase) -> Phase {
    x - x.floor()
}

/// Proper equivalence classes of primitive positive definite forms of one
/// discriminant under composition.
///
/// Elements are indexed by position in [`ClassGroup::forms`]; index 0 is the
/// principal class. Internally every class is written uniquely as
/// `g_1^{j_1} ⋯ g_r^{j_r}` with `0 <= j_k < m_k`, where `m_k` is the order of
/// `g_k` modulo `<g_1, …, g_{k-1}>`.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    disc: i64,
    forms: Vec<QuadForm>,
    index: HashMap<QuadForm, usize>,
    generators: Vec<usize>,
    relative_orders: Vec<u32>,
    coords: Vec<Vec<u32>>,
    structure: Vec<u64>,
    characters: CharacterTable,
}

impl ClassGroup {
    pub fn new(disc: i64) -> Result<Self> {
        Self::with_bound(disc, DEFAULT_DISCRIMINANT_BOUND)
    }

    pub fn with_bound(disc: i64, bound: i64) -> Result<Self> {
        if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) || -disc > bound {
            return Err(Error::InvalidDiscriminant(disc));
        }
        let forms = reduced_forms(disc);
        let index: HashMap<QuadForm, usize> =
            forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut group = ClassGroup {
            disc,
            forms,
            index,
            generators: Vec::new(),
            relative_orders: Vec::new(),
            coords: Vec::new(),
            structure: Vec::new(),
            characters: CharacterTable::default(),
        };
        let relations = group.build_tower()?;
        group.structure = invariant_factors(&group.relative_orders, &relations);
        group.characters = CharacterTable::build(&group.relative_orders, &relations);
        Ok(group)
    }

    /// Picks generators greedily and records each `g_k^{m_k}` in terms of the
    /// earlier generators.
    fn build_tower(&mut self) -> Result<Vec<Vec<u32>>> {
        let h = self.forms.len();
        let mut coords: Vec<Option<Vec<u32>>> = vec![None; h];
        coords[0] = Some(Vec::new());
        let mut members = vec![0usize];
        let mut relations = Vec::new();
        while members.len() < h {
            let g = coords.iter().position(Option::is_none).expect("class outside subgroup");
            let mut power = g;
            let mut m = 1u32;
            while coords[power].is_none() {
                power = self.compose_forms(power, g)?;
                m += 1;
            }
            let k = self.generators.len();
            let mut relation = coords[power].clone().expect("power lies in subgroup");
            relation.resize(k, 0);
            relations.push(relation);
            for &x in &members {
                coords[x].as_mut().expect("member has coordinates").resize(k + 1, 0);
            }
            let mut new_members = Vec::new();
            let mut gj = 0usize;
            for j in 1..m {
                gj = self.compose_forms(gj, g)?;
                for &x in &members {
                    let y = self.compose_forms(x, gj)?;
                    let mut c = coords[x].clone().expect("member has coordinates");
                    c[k] = j;
                    coords[y] = Some(c);
                    new_members.push(y);
                }
            }
            members.extend(new_members);
            self.generators.push(g);
            self.relative_orders.push(m);
        }
        let r = self.generators.len();
        self.coords = coords
            .into_iter()
            .map(|c| {
                let mut c = c.expect("every class reached");
                c.resize(r, 0);
                c
            })
            .collect();
        Ok(relations)
    }

    fn compose_forms(&self, i: usize, j: usize) -> Result<usize> {
        let f = compose(&self.forms[i], &self.forms[j])?;
        self.index.get(&f).copied().ok_or_else(|| Error::InvariantViolation {
            check: "composition",
            detail: format!("{} * {} = {f} is not a reduced form of D = {}", self.forms[i], self.forms[j], self.disc),
        })
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// Class number.
    pub fn h(&self) -> usize {
        self.forms.len()
    }

    /// Number of units in the order of discriminant `D`.
    pub fn w(&self) -> u32 {
        match self.disc {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn form(&self, class: usize) -> QuadForm {
        self.forms[class]
    }

    /// Invariant factors `n_1 | n_2 | …` with `h = ∏ n_i`; empty for `h = 1`.
    pub fn structure(&self) -> &[u64] {
        &self.structure
    }

    /// Class of an arbitrary primitive form of this discriminant.
    pub fn class_of(&self, form: &QuadForm) -> Result<usize> {
        if form.discriminant() != self.disc {
            return Err(Error::InvalidDiscriminant(form.discriminant()));
        }
        let red = reduce(*form)?;
        self.index.get(&red).copied().ok_or_else(|| Error::InvariantViolation {
            check: "primitive",
            detail: format!("form {form} is not primitive"),
        })
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.compose_forms(i, j).expect("composition closes on the class group")
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.index[&reduce(self.forms[i].inverse()).expect("reduced form is definite")]
    }

    pub fn order(&self, i: usize) -> u64 {
        let (mut x, mut n) = (i, 1);
        while x != 0 {
            x = self.compose(x, i);
            n += 1;
        }
        n
    }

    /// Full `h × h` composition table.
    pub fn composition_table(&self) -> Vec<Vec<usize>> {
        (0..self.h())
            .map(|i| (0..self.h()).map(|j| self.compose(i, j)).collect())
            .collect()
    }

    pub fn characters(&self) -> &CharacterTable {
        &self.characters
    }

    /// `χ(c)` as an exact phase in `[0, 1)`.
    pub fn character_phase(&self, chi: usize, class: usize) -> Phase {
        let phases = &self.characters.phases[chi];
        frac(
            self.coords[class]
                .iter()
                .zip(phases)
                .fold(Phase::zero(), |acc, (&j, &t)| acc + t * j as i64),
        )
    }

    pub fn character_value(&self, chi: usize, class: usize) -> Complex64 {
        phase_to_complex(self.character_phase(chi, class))
    }

    /// Whether `χ` takes only the values `±1`.
    pub fn is_real_character(&self, chi: usize) -> bool {
        self.characters.phases[chi]
            .iter()
            .all(|t| (*t * 2).is_integer())
    }
}

/// Characters stored by their exact phases on the internal generators.
#[derive(Debug, Clone, Default)]
pub struct CharacterTable {
    phases: Vec<Vec<Phase>>,
}

impl CharacterTable {
    /// Extends each character of `<g_1..g_{k-1}>` to `<g_1..g_k>` in all
    /// `m_k` ways: `χ(g_k)` runs over the `m_k`-th roots of `χ(g_k^{m_k})`.
    fn build(relative_orders: &[u32], relations: &[Vec<u32>]) -> Self {
        let mut phases: Vec<Vec<Phase>> = vec![Vec::new()];
        for (k, (&m, rel)) in relative_orders.iter().zip(relations).enumerate() {
            let mut next = Vec::with_capacity(phases.len() * m as usize);
            for t in 0..m as i64 {
                for chi in &phases {
                    let base = rel
                        .iter()
                        .zip(chi)
                        .fold(Phase::zero(), |acc, (&j, &p)| acc + p * j as i64);
                    let mut ext = chi.clone();
                    ext.push(frac((base + t) / m as i64));
                    debug_assert_eq!(ext.len(), k + 1);
                    next.push(ext);
                }
            }
            phases = next;
        }
        CharacterTable { phases }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

pub(crate) fn phase_to_complex(t: Phase) -> Complex64 {
    if t.is_zero() {
        return Complex64::one();
    }
    if t == Phase::new(1, 2) {
        return Complex64::new(-1.0, 0.0);
    }
    Complex64::from_polar(1.0, TAU * (*t.numer() as f64) / (*t.denom() as f64))
}

fn reduced_forms(disc: i64) -> Vec<QuadForm> {
    let mut forms = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 || (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - disc) / (4 * a);
            if c < a || (b < 0 && a == c) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            forms.push(QuadForm { a, b, c });
        }
        a += 1;
    }
    forms
}

/// Invariant factors of `Z^r / L`, where row `k` of `L` is the relation
/// `m_k e_k = Σ_{i<k} rel_k[i] e_i`, read off the Smith normal form.
fn invariant_factors(relative_orders: &[u32], relations: &[Vec<u32>]) -> Vec<u64> {
    let r = relations.len();
    let mut a = vec![vec![0i128; r]; r];
    for (k, rel) in relations.iter().enumerate() {
        for (i, &c) in rel.iter().enumerate() {
            a[k][i] = -(c as i128);
        }
        a[k][k] = relative_orders[k] as i128;
    }
    let mut diag = Vec::with_capacity(r);
    for t in 0..r {
        loop {
            let pivot = (t..r)
                .flat_map(|i| (t..r).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..r {
                let q = a[i][t] / a[t][t];
                for j in t..r {
                    a[i][j] -= q * a[t][j];
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..r {
                let q = a[t][j] / a[t][t];
                for row in a.iter_mut() {
                    row[j] -= q * row[t];
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let stray = (t + 1..r)
                .find(|&i| (t + 1..r).any(|j| a[i][j] % a[t][t] != 0));
            match stray {
                Some(i) => {
                    for j in t..r {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].unsigned_abs() as u64);
    }
    diag.retain(|&d| d > 1);
    diag.sort_unstable();
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_discriminants() {
        let g = ClassGroup::new(-4).unwrap();
        assert_eq!((g.h(), g.w()), (1, 4));
        let g = ClassGroup::new(-3).unwrap();
        assert_eq!((g.h(), g.w()), (1, 6));
        let g = ClassGroup::new(-20).unwrap();
        assert_eq!(g.forms(), &[QuadForm { a: 1, b: 0, c: 5 }, QuadForm { a: 2, b: 2, c: 3 }]);
        assert_eq!(g.w(), 2);
        assert!(ClassGroup::new(-5).is_err());
        assert!(ClassGroup::new(5).is_err());
        assert!(ClassGroup::with_bound(-2_000_003, 2_000_000).is_err());
    }

    #[test]
    fn structures() {
        for (d, h, structure) in [
            (-23, 3, vec![3]),
            (-56, 4, vec![4]),
            (-84, 4, vec![2, 2]),
            (-420, 8, vec![2, 2, 2]),
            (-4 * 65, 8, vec![2, 4]),
            (-3 * 4 * 9, 3, vec![3]),
        ] {
            let g = ClassGroup::new(d).unwrap();
            assert_eq!(g.h(), h, "D={d}");
            assert_eq!(g.structure(), structure.as_slice(), "D={d}");
            assert_eq!(g.characters().len(), h);
        }
    }

    #[test]
    fn group_laws_up_to_2000() {
        for d in (3..=2000).map(|n| -n).filter(|d: &i64| matches!(d.rem_euclid(4), 0 | 1)) {
            let g = ClassGroup::new(d).unwrap();
            let h = g.h();
            let t = g.composition_table();
            let exponent: u64 = g.structure().last().copied().unwrap_or(1);
            assert_eq!(g.structure().iter().product::<u64>(), h as u64, "D={d}");
            for i in 0..h {
                assert_eq!(t[0][i], i);
                assert_eq!(t[i][g.inverse(i)], 0);
                assert_eq!(exponent % g.order(i), 0, "D={d}");
                for j in 0..h {
                    assert_eq!(t[i][j], t[j][i]);
                    if h <= 12 {
                        for k in 0..h {
                            assert_eq!(t[t[i][j]][k], t[i][t[j][k]], "D={d}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn characters_are_homomorphisms_and_orthogonal() {
        for d in [-3, -4, -23, -47, -56, -84, -260, -420, -1155, -3299] {
            let g = ClassGroup::new(d).unwrap();
            let h = g.h();
            for chi in 0..h {
                for i in 0..h {
                    for j in 0..h {
                        let lhs = g.character_phase(chi, g.compose(i, j));
                        let rhs = frac(g.character_phase(chi, i) + g.character_phase(chi, j));
                        assert_eq!(lhs, rhs, "D={d}");
                    }
                }
                for psi in 0..h {
                    let s: Complex64 = (0..h)
                        .map(|c| g.character_value(chi, c) * g.character_value(psi, c).conj())
                        .sum();
                    let expected = if chi == psi { h as f64 } else { 0.0 };
                    assert!((s - expected).norm() < 1e-12, "D={d} {chi} {psi}: {s}");
                }
            }
            assert!(g.is_real_character(0));
        }
    }

    #[test]
    fn cyclic_three_has_complex_characters() {
        let g = ClassGroup::new(-23).unwrap();
        let real = (0..3).filter(|&c| g.is_real_character(c)).count();
        assert_eq!(real, 1);
        let w = g.character_value(1, g.generators[0]);
        assert!((w.powu(3) - Complex64::one()).norm() < 1e-14);
        assert!((w - Complex64::one()).norm() > 1.0);
    }
}
