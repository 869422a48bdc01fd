//! Finite groups: direct products of cyclic groups plus the two nonabelian
//! groups of order 8 that are built in.
//!
//! Elements are numbered `0..|G|`, with index 0 the identity. Abelian elements
//! use mixed-radix coordinates, leftmost factor most significant, so in
//! `C4xC2` the element `(c1, c2)` has index `2*c1 + c2`.
//!
//! Compared with writing `C_n = {1, 2, ..., n}` with `n` as the identity, the
//! coordinate `c` here corresponds to the residue class of `c` mod `n`, so
//! the identity moves from last to first and nothing else changes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};

/// The built-in nonabelian groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Quaternion group, elements `1, -1, i, -i, j, -j, k, -k`.
    Q8,
    /// Dihedral group of order 8, elements `r^0..r^3, s, sr, sr^2, sr^3`.
    D4,
}

// Rows are the left operand.
const Q8_TABLE: [[u8; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 5, 4, 7, 6],
    [2, 3, 1, 0, 6, 7, 5, 4],
    [3, 2, 0, 1, 7, 6, 4, 5],
    [4, 5, 7, 6, 1, 0, 2, 3],
    [5, 4, 6, 7, 0, 1, 3, 2],
    [6, 7, 4, 5, 3, 2, 1, 0],
    [7, 6, 5, 4, 2, 3, 0, 1],
];

const D4_TABLE: [[u8; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 2, 3, 0, 7, 4, 5, 6],
    [2, 3, 0, 1, 6, 7, 4, 5],
    [3, 0, 1, 2, 5, 6, 7, 4],
    [4, 5, 6, 7, 0, 1, 2, 3],
    [5, 6, 7, 4, 3, 0, 1, 2],
    [6, 7, 4, 5, 2, 3, 0, 1],
    [7, 4, 5, 6, 1, 2, 3, 0],
];

const Q8_NAMES: [&str; 8] = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
const D4_NAMES: [&str; 8] = ["r0", "r1", "r2", "r3", "s", "sr", "sr2", "sr3"];

impl Builtin {
    fn table(self) -> &'static [[u8; 8]; 8] {
        match self {
            Builtin::Q8 => &Q8_TABLE,
            Builtin::D4 => &D4_TABLE,
        }
    }

    pub fn element_names(self) -> &'static [&'static str; 8] {
        match self {
            Builtin::Q8 => &Q8_NAMES,
            Builtin::D4 => &D4_NAMES,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Q8 => "Q8",
            Builtin::D4 => "D4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Abelian { factors: Vec<usize> },
    Builtin(Builtin),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    kind: GroupKind,
    order: usize,
    prime: Option<u64>,
    exponent: usize,
    // Mixed-radix place values, one per factor; empty for builtins.
    strides: Vec<usize>,
}

/// Which part of a group [`FiniteGroup::collapse`] sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollapsePart {
    Factor(usize),
    Commutator,
}

/// Integer coefficients `a_g`, one per element in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<BigInt>);

impl Assignment {
    pub fn new(values: Vec<BigInt>) -> Self {
        Assignment(values)
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Assignment(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Assignment(vec![BigInt::zero(); len])
    }

    pub fn ones(len: usize) -> Self {
        Assignment(vec![BigInt::from(1); len])
    }

    /// Indicator of element `index`; `delta(len, 0)` is the convolution identity.
    pub fn delta(len: usize, index: usize) -> Self {
        let mut a = Self::zeros(len);
        a.0[index] = BigInt::from(1);
        a
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_values(self) -> Vec<BigInt> {
        self.0
    }

    pub fn sum(&self) -> BigInt {
        self.0.iter().sum()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|v| v.to_i64()).collect()
    }
}

impl std::ops::Index<usize> for Assignment {
    type Output = BigInt;

    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            break;
        }
        p += 1;
    }
    if p * p > n {
        p = n;
    }
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    (m == 1).then_some(p)
}

impl FiniteGroup {
    /// Direct product of cyclic groups of the given orders, in the given order.
    pub fn abelian(factors: Vec<usize>) -> Result<Self> {
        let mut order: usize = 1;
        let mut exponent: usize = 1;
        for &n in &factors {
            if n == 0 {
                return Err(Error::GroupSpec {
                    atom: "C0".into(),
                    reason: "cyclic order must be at least 1".into(),
                });
            }
            order = order.checked_mul(n).ok_or_else(|| Error::GroupSpec {
                atom: format!("C{n}"),
                reason: "group order overflows".into(),
            })?;
            exponent = exponent.lcm(&n);
        }
        let bases: Vec<Option<u64>> = factors
            .iter()
            .filter(|&&n| n > 1)
            .map(|&n| prime_power_base(n as u64))
            .collect();
        let prime = match bases.first() {
            Some(&Some(p)) if bases.iter().all(|&b| b == Some(p)) => Some(p),
            _ => None,
        };
        let mut strides = vec![1usize; factors.len()];
        for t in (0..factors.len().saturating_sub(1)).rev() {
            strides[t] = strides[t + 1] * factors[t + 1];
        }
        Ok(FiniteGroup {
            kind: GroupKind::Abelian { factors },
            order,
            prime,
            exponent,
            strides,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::abelian(vec![n])
    }

    pub fn builtin(tag: Builtin) -> Self {
        FiniteGroup {
            kind: GroupKind::Builtin(tag),
            order: 8,
            prime: Some(2),
            exponent: 4,
            strides: Vec::new(),
        }
    }

    pub fn q8() -> Self {
        Self::builtin(Builtin::Q8)
    }

    pub fn d4() -> Self {
        Self::builtin(Builtin::D4)
    }

    /// Parses `C<k>` atoms joined by `x`, or `Q8` / `D4`. Case-insensitive;
    /// whitespace is rejected.
    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::GroupSpec {
                atom: String::new(),
                reason: "empty group spec".into(),
            });
        }
        if let Some(c) = text.chars().find(|c| c.is_whitespace()) {
            return Err(Error::GroupSpec {
                atom: text.into(),
                reason: format!("whitespace {c:?} is not allowed"),
            });
        }
        match text.to_ascii_uppercase().as_str() {
            "Q8" => return Ok(Self::q8()),
            "D4" => return Ok(Self::d4()),
            _ => {}
        }
        let mut factors = Vec::new();
        for atom in text.split(['x', 'X']) {
            let bad = |reason: &str| Error::GroupSpec {
                atom: atom.into(),
                reason: reason.into(),
            };
            let digits = atom
                .strip_prefix(['c', 'C'])
                .ok_or_else(|| bad("expected `C<k>`, `Q8` or `D4`"))?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("cyclic order must be a positive decimal integer"));
            }
            let k: usize = digits
                .parse()
                .map_err(|_| bad("cyclic order is too large"))?;
            if k == 0 {
                return Err(bad("cyclic order must be at least 1"));
            }
            factors.push(k);
        }
        Self::abelian(factors)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `Some(p)` when the order is a power of the prime `p` greater than 1.
    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.kind, GroupKind::Abelian { .. })
    }

    pub fn factors(&self) -> Option<&[usize]> {
        match &self.kind {
            GroupKind::Abelian { factors } => Some(factors),
            GroupKind::Builtin(_) => None,
        }
    }

    pub fn builtin_tag(&self) -> Option<Builtin> {
        match self.kind {
            GroupKind::Builtin(tag) => Some(tag),
            GroupKind::Abelian { .. } => None,
        }
    }

    pub(crate) fn abelian_factors(&self) -> Result<&[usize]> {
        self.factors()
            .ok_or_else(|| Error::NotAbelian(self.to_string()))
    }

    /// Mixed-radix coordinates of an abelian element.
    pub fn coords(&self, index: usize) -> Vec<usize> {
        match &self.kind {
            GroupKind::Abelian { factors } => factors
                .iter()
                .zip(&self.strides)
                .map(|(&n, &s)| (index / s) % n)
                .collect(),
            GroupKind::Builtin(_) => vec![index],
        }
    }

    pub fn index_of(&self, coords: &[usize]) -> usize {
        match &self.kind {
            GroupKind::Abelian { factors } => coords
                .iter()
                .zip(factors)
                .zip(&self.strides)
                .map(|((&c, &n), &s)| (c % n) * s)
                .sum(),
            GroupKind::Builtin(_) => coords[0],
        }
    }

    /// Human-readable element label.
    pub fn element_name(&self, index: usize) -> String {
        match &self.kind {
            GroupKind::Abelian { .. } => {
                let c: Vec<String> = self.coords(index).iter().map(|c| c.to_string()).collect();
                format!("({})", c.join(","))
            }
            GroupKind::Builtin(tag) => tag.element_names()[index].to_string(),
        }
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.kind {
            GroupKind::Abelian { factors } => {
                let mut out = 0;
                for (&n, &s) in factors.iter().zip(&self.strides) {
                    out += ((x / s % n + y / s % n) % n) * s;
                }
                out
            }
            GroupKind::Builtin(tag) => tag.table()[x][y] as usize,
        }
    }

    pub fn inv(&self, x: usize) -> usize {
        match &self.kind {
            GroupKind::Abelian { factors } => {
                let mut out = 0;
                for (&n, &s) in factors.iter().zip(&self.strides) {
                    out += ((n - x / s % n) % n) * s;
                }
                out
            }
            GroupKind::Builtin(tag) => {
                let row = &tag.table()[x];
                row.iter().position(|&e| e == 0).expect("Cayley row contains identity")
            }
        }
    }

    /// `M[i][j] = index(g_i * g_j^-1)`; the group matrix whose determinant
    /// is the group determinant.
    pub fn group_matrix(&self) -> Vec<Vec<usize>> {
        let inverses: Vec<usize> = (0..self.order).map(|j| self.inv(j)).collect();
        (0..self.order)
            .map(|i| inverses.iter().map(|&jinv| self.mul(i, jinv)).collect())
            .collect()
    }

    /// Subgroup generated by all commutators, as sorted element indices.
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        if self.is_abelian() {
            return vec![0];
        }
        let n = self.order;
        let mut member = vec![false; n];
        member[0] = true;
        let mut gens = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let c = self.mul(self.mul(x, y), self.inv(self.mul(y, x)));
                if !member[c] {
                    member[c] = true;
                    gens.push(c);
                }
            }
        }
        // Close under multiplication.
        let mut frontier: Vec<usize> = (0..n).filter(|&i| member[i]).collect();
        while let Some(h) = frontier.pop() {
            for &g in &gens {
                let p = self.mul(h, g);
                if !member[p] {
                    member[p] = true;
                    frontier.push(p);
                }
            }
        }
        (0..n).filter(|&i| member[i]).collect()
    }

    /// `G/G'` as an abelian group together with the projection `G -> G/G'`.
    pub fn abelianization(&self) -> (FiniteGroup, Vec<usize>) {
        if self.is_abelian() {
            return (self.clone(), (0..self.order).collect());
        }
        let derived = self.commutator_subgroup();
        let coset_rep = |g: usize| derived.iter().map(|&h| self.mul(g, h)).min().unwrap();
        let reps: Vec<usize> = {
            let mut r: Vec<usize> = (0..self.order).map(coset_rep).collect();
            r.sort_unstable();
            r.dedup();
            r
        };
        // Both builtin quotients have exponent 2: pick a basis greedily and
        // read off F_2 coordinates.
        let mut basis: Vec<usize> = Vec::new();
        let mut span: Vec<usize> = vec![0];
        for &r in &reps {
            if span.contains(&r) {
                continue;
            }
            assert_eq!(
                coset_rep(self.mul(r, r)),
                0,
                "abelianization of {self} is not elementary abelian"
            );
            let extra: Vec<usize> = span.iter().map(|&s| coset_rep(self.mul(s, r))).collect();
            span.extend(extra);
            basis.push(r);
        }
        let quotient = FiniteGroup::abelian(vec![2; basis.len()]).expect("valid factors");
        let mut coset_to_index = std::collections::HashMap::new();
        for idx in 0..quotient.order() {
            let coords = quotient.coords(idx);
            let mut g = 0;
            for (&b, &c) in basis.iter().zip(&coords) {
                if c == 1 {
                    g = self.mul(g, b);
                }
            }
            coset_to_index.insert(coset_rep(g), idx);
        }
        let projection = (0..self.order).map(|g| coset_to_index[&coset_rep(g)]).collect();
        (quotient, projection)
    }

    /// The abelian group with factor `t` removed; `C1` if nothing is left.
    pub fn without_factor(&self, t: usize) -> Result<FiniteGroup> {
        let factors = self.abelian_factors()?;
        if t >= factors.len() {
            return Err(Error::FactorOutOfRange {
                index: t,
                count: factors.len(),
            });
        }
        let mut rest: Vec<usize> = factors.to_vec();
        rest.remove(t);
        if rest.is_empty() {
            rest.push(1);
        }
        FiniteGroup::abelian(rest)
    }

    /// Sums an assignment over the cosets of one direct factor or of `G'`.
    pub fn collapse(&self, part: CollapsePart, a: &Assignment) -> Result<(FiniteGroup, Assignment)> {
        self.check_len(a)?;
        match part {
            CollapsePart::Factor(t) => {
                let quotient = self.without_factor(t)?;
                let mut b = vec![BigInt::zero(); quotient.order()];
                for (g, v) in a.values().iter().enumerate() {
                    let mut c = self.coords(g);
                    c.remove(t);
                    let h = if c.is_empty() { 0 } else { quotient.index_of(&c) };
                    b[h] += v;
                }
                Ok((quotient, Assignment(b)))
            }
            CollapsePart::Commutator => {
                let (quotient, proj) = self.abelianization();
                let mut b = vec![BigInt::zero(); quotient.order()];
                for (g, v) in a.values().iter().enumerate() {
                    b[proj[g]] += v;
                }
                Ok((quotient, Assignment(b)))
            }
        }
    }

    pub(crate) fn check_len(&self, a: &Assignment) -> Result<()> {
        if a.len() != self.order {
            return Err(Error::LengthMismatch {
                expected: self.order,
                got: a.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Abelian { factors } => {
                let atoms: Vec<String> = factors.iter().map(|n| format!("C{n}")).collect();
                f.write_str(&atoms.join("x"))
            }
            GroupKind::Builtin(tag) => f.write_str(tag.name()),
        }
    }
}

impl FromStr for FiniteGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FiniteGroup {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let c4c2 = g("C4xC2");
        assert_eq!(c4c2.factors(), Some(&[4, 2][..]));
        assert_eq!(c4c2.order(), 8);
        assert_eq!(c4c2.prime(), Some(2));
        assert_eq!(c4c2.exponent(), 4);

        let q8 = g("Q8");
        assert_eq!(q8.builtin_tag(), Some(Builtin::Q8));
        assert_eq!((q8.order(), q8.exponent()), (8, 4));

        let c6 = g("C6");
        assert_eq!((c6.order(), c6.prime()), (6, None));
        assert_eq!(g("c9xC3").prime(), Some(3));
        assert_eq!(g("d4").to_string(), "D4");
        assert_eq!(g("C2xC3").prime(), None);
        assert_eq!(g("C4xC6").prime(), None);
        assert_eq!(g("C1").prime(), None);
    }

    #[test]
    fn parse_errors_name_the_atom() {
        for (spec, atom) in [
            ("C0", "C0"),
            ("C4xC0", "C0"),
            ("C4xx2", ""),
            ("C-2", "C-2"),
            ("Z4", "Z4"),
            ("C4x", ""),
            ("C", "C"),
        ] {
            match FiniteGroup::parse(spec) {
                Err(Error::GroupSpec { atom: a, .. }) => assert_eq!(a, atom, "{spec}"),
                other => panic!("{spec}: {other:?}"),
            }
        }
        assert!(FiniteGroup::parse("C4 xC2").is_err());
        assert!(FiniteGroup::parse("").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["C4xC2", "C16", "C3xC3xC9", "Q8", "D4"] {
            assert_eq!(g(s).to_string(), s);
            assert_eq!(g(&g(s).to_string()), g(s));
        }
    }

    #[test]
    fn coords_round_trip() {
        let grp = g("C4xC2xC3");
        for i in 0..grp.order() {
            assert_eq!(grp.index_of(&grp.coords(i)), i);
        }
        assert_eq!(grp.coords(0), vec![0, 0, 0]);
        assert_eq!(grp.index_of(&[1, 0, 0]), 6);
    }

    #[test]
    fn small_group_matrices() {
        assert_eq!(g("C2").group_matrix(), vec![vec![0, 1], vec![1, 0]]);
        let m = g("C3").group_matrix();
        for row in &m {
            let mut r = row.clone();
            r.sort();
            assert_eq!(r, vec![0, 1, 2]);
        }
    }

    fn all_test_groups() -> Vec<FiniteGroup> {
        [
            "C1", "C2", "C3", "C4", "C6", "C8", "C9", "C16", "C2xC2", "C4xC2", "C2xC2xC2",
            "C3xC3", "C4xC4", "C2xC4xC2", "C2xC2xC2xC2", "Q8", "D4",
        ]
        .iter()
        .map(|s| g(s))
        .collect()
    }

    #[test]
    fn group_matrices_are_latin_with_zero_diagonal() {
        for grp in all_test_groups() {
            let m = grp.group_matrix();
            let n = grp.order();
            for i in 0..n {
                assert_eq!(m[i][i], 0, "{grp}");
                let mut seen_row = vec![false; n];
                let mut seen_col = vec![false; n];
                for j in 0..n {
                    assert!(!seen_row[m[i][j]], "{grp} row {i}");
                    seen_row[m[i][j]] = true;
                    assert!(!seen_col[m[j][i]], "{grp} col {i}");
                    seen_col[m[j][i]] = true;
                }
            }
        }
    }

    #[test]
    fn builtin_tables_are_groups() {
        for grp in [FiniteGroup::q8(), FiniteGroup::d4()] {
            for x in 0..8 {
                assert_eq!(grp.mul(0, x), x);
                assert_eq!(grp.mul(x, grp.inv(x)), 0);
                for y in 0..8 {
                    for z in 0..8 {
                        assert_eq!(
                            grp.mul(grp.mul(x, y), z),
                            grp.mul(x, grp.mul(y, z)),
                            "{grp} associativity"
                        );
                    }
                }
            }
        }
        let q8 = FiniteGroup::q8();
        // i*j = k, j*i = -k
        assert_eq!(q8.mul(2, 4), 6);
        assert_eq!(q8.mul(4, 2), 7);
        let d4 = FiniteGroup::d4();
        // r s = s r^3
        assert_eq!(d4.mul(1, 4), 7);
    }

    // Brute force: every product x y x^-1 y^-1, closed under multiplication.
    fn brute_commutators(grp: &FiniteGroup) -> Vec<usize> {
        let n = grp.order();
        let mut set: Vec<usize> = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let c = grp.mul(grp.mul(grp.mul(x, y), grp.inv(x)), grp.inv(y));
                if !set.contains(&c) {
                    set.push(c);
                }
            }
        }
        loop {
            let mut grew = false;
            for a in set.clone() {
                for b in set.clone() {
                    let p = grp.mul(a, b);
                    if !set.contains(&p) {
                        set.push(p);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        set.sort();
        set
    }

    #[test]
    fn abelianization_of_builtins() {
        let q8 = FiniteGroup::q8();
        assert_eq!(q8.commutator_subgroup(), vec![0, 1]);
        assert_eq!(brute_commutators(&q8), vec![0, 1]);
        let (quot, _) = q8.abelianization();
        assert_eq!(quot.to_string(), "C2xC2");

        let d4 = FiniteGroup::d4();
        assert_eq!(d4.commutator_subgroup(), vec![0, 2]);
        assert_eq!(brute_commutators(&d4), vec![0, 2]);
        assert_eq!(d4.abelianization().0.to_string(), "C2xC2");

        let c4c2 = g("C4xC2");
        let (quot, proj) = c4c2.abelianization();
        assert_eq!(quot, c4c2);
        assert_eq!(proj, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn projection_is_homomorphism() {
        for grp in all_test_groups() {
            let (quot, proj) = grp.abelianization();
            for x in 0..grp.order() {
                for y in 0..grp.order() {
                    assert_eq!(proj[grp.mul(x, y)], quot.mul(proj[x], proj[y]), "{grp}");
                }
            }
        }
    }

    #[test]
    fn collapse_examples() {
        let c2c2 = g("C2xC2");
        let (h, b) = c2c2
            .collapse(CollapsePart::Factor(0), &Assignment::from_i64s(&[2, 1, 1, 1]))
            .unwrap();
        assert_eq!(h.to_string(), "C2");
        assert_eq!(b, Assignment::from_i64s(&[3, 2]));

        let (h, b) = FiniteGroup::q8()
            .collapse(CollapsePart::Commutator, &Assignment::delta(8, 0))
            .unwrap();
        assert_eq!(h.to_string(), "C2xC2");
        assert_eq!(b, Assignment::from_i64s(&[1, 0, 0, 0]));

        let (h, b) = g("C4xC2")
            .collapse(CollapsePart::Factor(1), &Assignment::ones(8))
            .unwrap();
        assert_eq!(h.to_string(), "C4");
        assert_eq!(b, Assignment::from_i64s(&[2, 2, 2, 2]));

        let (h, b) = g("C5")
            .collapse(CollapsePart::Factor(0), &Assignment::from_i64s(&[1, 2, 3, 4, 5]))
            .unwrap();
        assert_eq!(h.order(), 1);
        assert_eq!(b, Assignment::from_i64s(&[15]));

        assert_eq!(
            c2c2.collapse(CollapsePart::Factor(2), &Assignment::ones(4)),
            Err(Error::FactorOutOfRange { index: 2, count: 2 })
        );
        assert!(matches!(
            c2c2.collapse(CollapsePart::Factor(0), &Assignment::ones(3)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn collapse_all_ones_gives_coset_sizes() {
        for grp in all_test_groups() {
            let part = if grp.is_abelian() {
                CollapsePart::Factor(0)
            } else {
                CollapsePart::Commutator
            };
            let (quot, b) = grp.collapse(part, &Assignment::ones(grp.order())).unwrap();
            let coset = BigInt::from(grp.order() / quot.order());
            assert!(b.values().iter().all(|v| *v == coset), "{grp}");
        }
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn collapse_preserves_sum(vals in proptest::collection::vec(-50i64..50, 16), t in 0usize..3) {
            let grp = g("C2xC4xC2");
            let a = Assignment::from_i64s(&vals);
            let (_, b) = grp.collapse(CollapsePart::Factor(t), &a).unwrap();
            prop_assert_eq!(b.sum(), a.sum());
            let d4 = FiniteGroup::d4();
            let a8 = Assignment::from_i64s(&vals[..8]);
            let (_, b8) = d4.collapse(CollapsePart::Commutator, &a8).unwrap();
            prop_assert_eq!(b8.sum(), a8.sum());
        }
    }
}
