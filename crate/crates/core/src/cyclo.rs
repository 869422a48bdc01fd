//! Cyclotomic integers, characters of abelian groups, and the factorizations
//! of the group determinant built from them.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactdet;
use crate::group::{Assignment, Builtin, CollapsePart, FiniteGroup};

fn phi_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the `m`-th cyclotomic polynomial, constant term first.
///
/// Computed as `(x^m - 1) / prod_{d | m, d < m} Phi_d` and cached per `m`.
pub fn cyclotomic_poly(m: usize) -> Arc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic index must be positive");
    if let Some(p) = phi_cache().lock().unwrap().get(&m) {
        return Arc::clone(p);
    }
    let mut num = vec![0i64; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in (1..m).filter(|d| m % d == 0) {
        num = div_monic_exact(&num, &cyclotomic_poly(d));
    }
    let poly = Arc::new(num);
    phi_cache()
        .lock()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

fn div_monic_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] = rem[k + i]
                .checked_sub(c.checked_mul(d).expect("cyclotomic coefficient overflow"))
                .expect("cyclotomic coefficient overflow");
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// An element of `Z[zeta_m]`, stored as `sum coeffs[k] zeta_m^k` modulo
/// `zeta_m^m - 1`. Equality compares canonical forms modulo `Phi_m`.
#[derive(Debug, Clone)]
pub struct CycloInt {
    modulus: usize,
    coeffs: Vec<BigInt>,
}

impl CycloInt {
    pub fn zero(modulus: usize) -> Self {
        assert!(modulus >= 1);
        CycloInt {
            modulus,
            coeffs: vec![BigInt::zero(); modulus],
        }
    }

    pub fn from_int(modulus: usize, v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(modulus);
        z.coeffs[0] = v.into();
        z
    }

    pub fn one(modulus: usize) -> Self {
        Self::from_int(modulus, 1)
    }

    /// `zeta_m^k`.
    pub fn zeta_pow(modulus: usize, k: usize) -> Self {
        let mut z = Self::zero(modulus);
        z.coeffs[k % modulus] = BigInt::one();
        z
    }

    pub fn from_coeffs(modulus: usize, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), modulus, "coefficient vector must have length m");
        CycloInt { modulus, coeffs }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Adds `v * zeta^k` in place.
    pub fn add_term(&mut self, k: usize, v: &BigInt) {
        let m = self.modulus;
        self.coeffs[k % m] += v;
    }

    /// Remainder modulo `Phi_m`: `phi(m)` coefficients, unique per element.
    pub fn canonical(&self) -> Vec<BigInt> {
        let phi = cyclotomic_poly(self.modulus);
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        for top in (deg..rem.len()).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut rem[top]);
            for (i, &p) in phi[..deg].iter().enumerate() {
                if p != 0 {
                    rem[top - deg + i] -= &c * p;
                }
            }
        }
        rem.truncate(deg);
        rem
    }

    /// The rational integer this element equals, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        let canon = self.canonical();
        if canon[1..].iter().all(Zero::is_zero) {
            Some(canon[0].clone())
        } else {
            None
        }
    }

    fn check_same(&self, other: &CycloInt) {
        assert_eq!(self.modulus, other.modulus, "mixed cyclotomic moduli");
    }
}

impl PartialEq for CycloInt {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.canonical() == other.canonical()
    }
}

impl Eq for CycloInt {}

impl Add for &CycloInt {
    type Output = CycloInt;

    fn add(self, rhs: &CycloInt) -> CycloInt {
        self.check_same(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CycloInt::from_coeffs(self.modulus, coeffs)
    }
}

impl Sub for &CycloInt {
    type Output = CycloInt;

    fn sub(self, rhs: &CycloInt) -> CycloInt {
        self.check_same(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CycloInt::from_coeffs(self.modulus, coeffs)
    }
}

impl Neg for &CycloInt {
    type Output = CycloInt;

    fn neg(self) -> CycloInt {
        CycloInt::from_coeffs(self.modulus, self.coeffs.iter().map(|a| -a).collect())
    }
}

/// Cyclic convolution: multiplication modulo `zeta^m - 1`.
impl Mul for &CycloInt {
    type Output = CycloInt;

    fn mul(self, rhs: &CycloInt) -> CycloInt {
        self.check_same(rhs);
        let m = self.modulus;
        let mut out = vec![BigInt::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[(i + j) % m] += a * b;
                }
            }
        }
        CycloInt::from_coeffs(m, out)
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let canon = self.canonical();
        let mut out = String::new();
        for (k, c) in canon.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            let body = match k {
                0 => mag.to_string(),
                1 => format!("{mag}*z{}", self.modulus),
                _ => format!("{mag}*z{}^{k}", self.modulus),
            };
            let neg = c.sign() == num_bigint::Sign::Minus;
            match (out.is_empty(), neg) {
                (true, false) => {}
                (true, true) => out.push('-'),
                (false, false) => out.push_str(" + "),
                (false, true) => out.push_str(" - "),
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// A degree-one character, identified by its exponent tuple: the character
/// with exponents `(e_1, .., e_s)` sends the generator of the `t`-th factor
/// to `exp(2 pi i e_t / n_t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    pub exponents: Vec<usize>,
}

impl Character {
    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// `k` with `chi(g) = zeta_m^k`, `m` the group exponent.
    pub fn value_exponent(&self, group: &FiniteGroup, g: usize) -> usize {
        let factors = group.factors().expect("characters live on abelian groups");
        let m = group.exponent();
        let coords = group.coords(g);
        let mut k = 0;
        for ((&e, &c), &n) in self.exponents.iter().zip(&coords).zip(factors) {
            k += e * c % n * (m / n);
        }
        k % m
    }

    pub fn value(&self, group: &FiniteGroup, g: usize) -> CycloInt {
        CycloInt::zeta_pow(group.exponent(), self.value_exponent(group, g))
    }
}

/// All `|G|` characters of an abelian group, trivial character first, in the
/// same mixed-radix order as the elements.
pub fn characters(group: &FiniteGroup) -> Result<Vec<Character>> {
    group.abelian_factors()?;
    Ok((0..group.order())
        .map(|i| Character {
            exponents: group.coords(i),
        })
        .collect())
}

/// `sum_g chi(g) a_g`.
pub fn linear_form(group: &FiniteGroup, chi: &Character, a: &Assignment) -> CycloInt {
    let mut acc = CycloInt::zero(group.exponent());
    for (g, v) in a.values().iter().enumerate() {
        if !v.is_zero() {
            acc.add_term(chi.value_exponent(group, g), v);
        }
    }
    acc
}

/// One linear form per character, in [`characters`] order.
pub fn dedekind_factors(group: &FiniteGroup, a: &Assignment) -> Result<Vec<CycloInt>> {
    group.check_len(a)?;
    Ok(characters(group)?
        .iter()
        .map(|chi| linear_form(group, chi, a))
        .collect())
}

fn product_to_integer(m: usize, forms: impl Iterator<Item = CycloInt>, what: &str) -> BigInt {
    let prod = forms.fold(CycloInt::one(m), |acc, f| &acc * &f);
    prod.to_integer()
        .unwrap_or_else(|| panic!("{what} is not a rational integer: {prod}"))
}

/// The group determinant as the product of the character linear forms.
pub fn dedekind_theta(group: &FiniteGroup, a: &Assignment) -> Result<BigInt> {
    let factors = dedekind_factors(group, a)?;
    Ok(product_to_integer(group.exponent(), factors.into_iter(), "character product"))
}

/// The split `theta_G(a) = alpha * beta` over a `C_p` direct factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaBeta {
    /// Index of the `C_p` factor the split is taken over.
    pub factor: usize,
    /// `theta_H` of the assignment summed over the `C_p` factor.
    pub alpha: BigInt,
    /// Product of the linear forms of characters nontrivial on `C_p`.
    pub beta: BigInt,
}

/// Splits the determinant over the first factor of order exactly `p`.
pub fn alpha_beta(group: &FiniteGroup, a: &Assignment) -> Result<AlphaBeta> {
    let factors = group.abelian_factors()?;
    let p = group
        .prime()
        .ok_or_else(|| Error::NotPGroup(group.to_string()))?;
    let t = factors
        .iter()
        .position(|&n| n as u64 == p)
        .ok_or_else(|| Error::Shape(format!("{group} has no direct factor C{p}")))?;
    group.check_len(a)?;

    let (sub, collapsed) = group.collapse(CollapsePart::Factor(t), a)?;
    let alpha = exactdet::theta(&sub, &collapsed)?;

    let nontrivial = characters(group)?
        .into_iter()
        .filter(|chi| chi.exponents[t] != 0)
        .map(|chi| linear_form(group, &chi, a));
    let beta = product_to_integer(group.exponent(), nontrivial, "beta");
    Ok(AlphaBeta {
        factor: t,
        alpha,
        beta,
    })
}

/// Entry of a hardcoded degree-2 representation: zero, or `zeta_4^k`.
type IrrepEntry = Option<u8>;
type Irrep2 = [[IrrepEntry; 2]; 2];

// Q8: i -> diag(i, -i), j -> [[0,1],[-1,0]], k = ij -> [[0,i],[i,0]].
const Q8_IRREP: [Irrep2; 8] = [
    [[Some(0), None], [None, Some(0)]],
    [[Some(2), None], [None, Some(2)]],
    [[Some(1), None], [None, Some(3)]],
    [[Some(3), None], [None, Some(1)]],
    [[None, Some(0)], [Some(2), None]],
    [[None, Some(2)], [Some(0), None]],
    [[None, Some(1)], [Some(1), None]],
    [[None, Some(3)], [Some(3), None]],
];

// D4: r -> [[0,-1],[1,0]], s -> diag(1,-1); entries are 0 or +-1.
const D4_IRREP: [Irrep2; 8] = [
    [[Some(0), None], [None, Some(0)]],
    [[None, Some(2)], [Some(0), None]],
    [[Some(2), None], [None, Some(2)]],
    [[None, Some(0)], [Some(2), None]],
    [[Some(0), None], [None, Some(2)]],
    [[None, Some(2)], [Some(2), None]],
    [[Some(2), None], [None, Some(0)]],
    [[None, Some(0)], [Some(0), None]],
];

/// The degree-2 irreducible representation of Q8 or D4, as powers of `zeta_4`.
pub fn degree2_irrep(tag: Builtin) -> &'static [Irrep2; 8] {
    match tag {
        Builtin::Q8 => &Q8_IRREP,
        Builtin::D4 => &D4_IRREP,
    }
}

/// `sum_g a_g phi(g)` for the degree-2 irrep, entries in `Z[zeta_4]`.
pub fn irrep_matrix(tag: Builtin, a: &Assignment) -> [[CycloInt; 2]; 2] {
    let irrep = degree2_irrep(tag);
    let mut mat: [[CycloInt; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| CycloInt::zero(4)));
    for (g, v) in a.values().iter().enumerate() {
        for r in 0..2 {
            for c in 0..2 {
                if let Some(k) = irrep[g][r][c] {
                    mat[r][c].add_term(k as usize, v);
                }
            }
        }
    }
    mat
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusParts {
    /// Determinant of the abelianization at the collapsed assignment.
    pub linear_part: BigInt,
    /// Determinant of `sum_g a_g phi(g)` for the degree-2 irrep.
    pub quadratic_det: BigInt,
}

impl FrobeniusParts {
    /// `linear_part * quadratic_det^2`, which equals the group determinant.
    pub fn theta(&self) -> BigInt {
        &self.linear_part * &self.quadratic_det * &self.quadratic_det
    }
}

/// Factors `theta_G` for Q8 or D4 into the abelianized determinant and the
/// squared determinant of the degree-2 irrep.
pub fn frobenius_factors(group: &FiniteGroup, a: &Assignment) -> Result<FrobeniusParts> {
    let tag = group
        .builtin_tag()
        .ok_or_else(|| Error::Unsupported(format!("{group} (Frobenius parts need Q8 or D4)")))?;
    group.check_len(a)?;
    let (quotient, collapsed) = group.collapse(CollapsePart::Commutator, a)?;
    let linear_part = exactdet::theta(&quotient, &collapsed)?;
    let m = irrep_matrix(tag, a);
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    let quadratic_det = det
        .to_integer()
        .unwrap_or_else(|| panic!("degree-2 determinant is not a rational integer: {det}"));
    Ok(FrobeniusParts {
        linear_part,
        quadratic_det,
    })
}
