//! Exact evaluation of the group determinant.
//!
//! [`theta`] is the reference: a fraction-free (Bareiss) determinant of the
//! `|G| x |G|` group matrix over big integers. [`FastTheta`] is the hot-loop
//! evaluator used by scans; it multiplies character linear forms (abelian
//! groups) or Frobenius parts (Q8, D4) in `i128` and reports overflow instead
//! of wrapping.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cyclo::{self, cyclotomic_poly, degree2_irrep};
use crate::error::{Error, Result};
use crate::group::{Assignment, FiniteGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    DirectDeterminant,
    CharacterProduct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetResult {
    pub value: BigInt,
    pub method: Method,
}

/// Determinant of a square matrix by Bareiss elimination with row pivoting.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                // Exact by Sylvester's identity.
                row[j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// The group determinant at an integer point, by direct determinant.
pub fn theta(group: &FiniteGroup, a: &Assignment) -> Result<BigInt> {
    group.check_len(a)?;
    let matrix = group
        .group_matrix()
        .into_iter()
        .map(|row| row.into_iter().map(|k| a[k].clone()).collect())
        .collect();
    Ok(bareiss_det(matrix))
}

/// The group determinant by the requested route. The character product is
/// only defined for abelian groups.
pub fn theta_with(group: &FiniteGroup, a: &Assignment, method: Method) -> Result<DetResult> {
    let value = match method {
        Method::DirectDeterminant => theta(group, a)?,
        Method::CharacterProduct => cyclo::dedekind_theta(group, a)?,
    };
    Ok(DetResult { value, method })
}

/// Group-algebra product: `c_g = sum_{xy = g} a_x b_y`.
pub fn convolve(group: &FiniteGroup, a: &Assignment, b: &Assignment) -> Result<Assignment> {
    group.check_len(a)?;
    group.check_len(b)?;
    let n = group.order();
    let mut c = vec![BigInt::zero(); n];
    for (x, ax) in a.values().iter().enumerate() {
        if ax.is_zero() {
            continue;
        }
        for (y, by) in b.values().iter().enumerate() {
            if !by.is_zero() {
                c[group.mul(x, y)] += ax * by;
            }
        }
    }
    Ok(Assignment::new(c))
}

/// `theta(a o sigma)` for a permutation of the elements.
pub fn permute(a: &Assignment, sigma: &[usize]) -> Assignment {
    Assignment::new(sigma.iter().map(|&s| a[s].clone()).collect())
}

#[derive(Debug, Clone)]
enum FastKind {
    Abelian {
        modulus: usize,
        // exps[chi * n + g] = k with chi(g) = zeta^k
        exps: Vec<u32>,
        phi: Vec<i128>,
    },
    Frobenius {
        // One +-1 sign row per character of G/G', pulled back to G.
        signs: Vec<[i8; 8]>,
        irrep: &'static [[[Option<u8>; 2]; 2]; 8],
    },
}

/// Precomputed evaluator for repeated determinant evaluation on one group.
#[derive(Debug, Clone)]
pub struct FastTheta {
    group: FiniteGroup,
    kind: FastKind,
}

type Gauss = (i128, i128);

fn gauss_unit(k: u8) -> Gauss {
    match k % 4 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    }
}

fn gauss_mul(x: Gauss, y: Gauss) -> Option<Gauss> {
    let re = x.0.checked_mul(y.0)?.checked_sub(x.1.checked_mul(y.1)?)?;
    let im = x.0.checked_mul(y.1)?.checked_add(x.1.checked_mul(y.0)?)?;
    Some((re, im))
}

impl FastTheta {
    pub fn new(group: &FiniteGroup) -> Self {
        let kind = match group.builtin_tag() {
            None => {
                let n = group.order();
                let chars = cyclo::characters(group).expect("abelian group");
                let mut exps = Vec::with_capacity(n * n);
                for chi in &chars {
                    for g in 0..n {
                        exps.push(chi.value_exponent(group, g) as u32);
                    }
                }
                let phi = cyclotomic_poly(group.exponent())
                    .iter()
                    .map(|&c| c as i128)
                    .collect();
                FastKind::Abelian {
                    modulus: group.exponent(),
                    exps,
                    phi,
                }
            }
            Some(tag) => {
                let (quotient, proj) = group.abelianization();
                let chars = cyclo::characters(&quotient).expect("abelian quotient");
                let signs = chars
                    .iter()
                    .map(|chi| {
                        let mut row = [0i8; 8];
                        for (g, s) in row.iter_mut().enumerate() {
                            // Exponent-2 quotient: values are zeta_2^k = +-1.
                            let k = chi.value_exponent(&quotient, proj[g]);
                            *s = if k == 0 { 1 } else { -1 };
                        }
                        row
                    })
                    .collect();
                FastKind::Frobenius {
                    signs,
                    irrep: degree2_irrep(tag),
                }
            }
        };
        FastTheta {
            group: group.clone(),
            kind,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// The determinant in `i128`, or `None` if an intermediate overflowed.
    pub fn eval(&self, a: &[i64]) -> Option<i128> {
        debug_assert_eq!(a.len(), self.group.order());
        match &self.kind {
            FastKind::Abelian { modulus, exps, phi } => {
                abelian_product(*modulus, a.len(), exps, phi, a)
            }
            FastKind::Frobenius { .. } => {
                let (lin, quad) = self.frobenius(a)?;
                lin.checked_mul(quad.checked_mul(quad)?)
            }
        }
    }

    /// `(linear_part, quadratic_det)` for Q8 / D4; `None` for abelian groups
    /// or on overflow.
    pub fn frobenius(&self, a: &[i64]) -> Option<(i128, i128)> {
        let FastKind::Frobenius { signs, irrep } = &self.kind else {
            return None;
        };
        let mut lin: i128 = 1;
        for row in signs {
            let form: i128 = row.iter().zip(a).map(|(&s, &v)| s as i128 * v as i128).sum();
            lin = lin.checked_mul(form)?;
        }
        let mut mat = [[(0i128, 0i128); 2]; 2];
        for (g, &v) in a.iter().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    if let Some(k) = irrep[g][r][c] {
                        let (re, im) = gauss_unit(k);
                        mat[r][c].0 += re * v as i128;
                        mat[r][c].1 += im * v as i128;
                    }
                }
            }
        }
        let d1 = gauss_mul(mat[0][0], mat[1][1])?;
        let d2 = gauss_mul(mat[0][1], mat[1][0])?;
        let det = (d1.0.checked_sub(d2.0)?, d1.1.checked_sub(d2.1)?);
        assert_eq!(det.1, 0, "degree-2 determinant has nonzero imaginary part at {a:?}");
        Some((lin, det.0))
    }

    /// Exact value: the `i128` path, or the big-integer character / Frobenius
    /// route when that overflows.
    pub fn eval_exact(&self, a: &[i64]) -> BigInt {
        if let Some(v) = self.eval(a) {
            return BigInt::from(v);
        }
        let asg = Assignment::from_i64s(a);
        match self.kind {
            FastKind::Abelian { .. } => cyclo::dedekind_theta(&self.group, &asg).expect("abelian"),
            FastKind::Frobenius { .. } => cyclo::frobenius_factors(&self.group, &asg)
                .expect("builtin")
                .theta(),
        }
    }

    /// Compares the fast path against the Bareiss determinant at one point.
    pub fn cross_check(&self, a: &[i64]) -> Result<BigInt> {
        let fast = self.eval_exact(a);
        let exact = theta(&self.group, &Assignment::from_i64s(a))?;
        if fast != exact {
            return Err(Error::OracleMismatch {
                point: a.to_vec(),
                fast: fast.to_string(),
                exact: exact.to_string(),
            });
        }
        Ok(exact)
    }
}

fn abelian_product(m: usize, n: usize, exps: &[u32], phi: &[i128], a: &[i64]) -> Option<i128> {
    const STACK: usize = 32;
    if m > STACK {
        return abelian_product_heap(m, n, exps, phi, a);
    }
    let mut acc = [0i128; STACK];
    let mut form = [0i128; STACK];
    let mut next = [0i128; STACK];
    acc[0] = 1;
    for chi in 0..n {
        form[..m].fill(0);
        let row = &exps[chi * n..(chi + 1) * n];
        for (&k, &v) in row.iter().zip(a) {
            form[k as usize] += v as i128;
        }
        cyclic_mul(&acc[..m], &form[..m], &mut next[..m])?;
        acc[..m].copy_from_slice(&next[..m]);
    }
    reduce_to_integer(&mut acc[..m], phi)
}

fn abelian_product_heap(m: usize, n: usize, exps: &[u32], phi: &[i128], a: &[i64]) -> Option<i128> {
    let mut acc = vec![0i128; m];
    let mut form = vec![0i128; m];
    let mut next = vec![0i128; m];
    acc[0] = 1;
    for chi in 0..n {
        form.fill(0);
        for (&k, &v) in exps[chi * n..(chi + 1) * n].iter().zip(a) {
            form[k as usize] += v as i128;
        }
        cyclic_mul(&acc, &form, &mut next)?;
        std::mem::swap(&mut acc, &mut next);
    }
    reduce_to_integer(&mut acc, phi)
}

fn cyclic_mul(x: &[i128], y: &[i128], out: &mut [i128]) -> Option<()> {
    let m = x.len();
    out.fill(0);
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            if yj == 0 {
                continue;
            }
            let k = if i + j >= m { i + j - m } else { i + j };
            out[k] = out[k].checked_add(xi.checked_mul(yj)?)?;
        }
    }
    Some(())
}

fn reduce_to_integer(poly: &mut [i128], phi: &[i128]) -> Option<i128> {
    let deg = phi.len() - 1;
    for top in (deg..poly.len()).rev() {
        let c = poly[top];
        if c == 0 {
            continue;
        }
        poly[top] = 0;
        for (i, &p) in phi[..deg].iter().enumerate() {
            if p != 0 {
                let t = top - deg + i;
                poly[t] = poly[t].checked_sub(c.checked_mul(p)?)?;
            }
        }
    }
    assert!(
        poly[1..deg.max(1)].iter().all(|&c| c == 0),
        "character product is not a rational integer: {poly:?}"
    );
    Some(poly[0])
}
