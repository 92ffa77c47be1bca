//! q-cyclotomic classes of Z/n and the objects attached to them:
//! primitive n-th roots of unity in the splitting extension, class
//! transcription polynomials, and the irreducible factors of x^n - 1
//! obtained as orbit products.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{coerce_down, extend, FFElement, FieldCtx};
use crate::num::{gcd_u128, prime_factors};
use crate::poly::Poly;

/// Multiplicative order of q modulo n. Requires gcd(q, n) = 1.
pub fn mult_order(q: u128, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::NotCoprime { q, n });
    }
    let q_red = (q % n as u128) as u64;
    if gcd_u128(q_red as u128, n as u128) != 1 {
        return Err(Error::NotCoprime { q, n });
    }
    if n == 1 {
        return Ok(1);
    }
    let mut t = q_red % n;
    let mut ord = 1u64;
    while t != 1 {
        t = (t as u128 * q_red as u128 % n as u128) as u64;
        ord += 1;
    }
    Ok(ord)
}

/// One orbit of multiplication by q on Z/n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicClass {
    pub representative: u64,
    pub members: Vec<u64>,
}

impl CyclotomicClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// All q-cyclotomic classes of Z/n, ordered by smallest member, so
/// class 0 is always {0}. `class_of[a]` indexes the class containing a.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    pub n: u64,
    pub q: u128,
    pub classes: Vec<CyclotomicClass>,
    pub class_of: Vec<usize>,
}

impl ClassPartition {
    /// Number of classes, conventionally written r + 1 with class 0
    /// the singleton {0}.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(CyclotomicClass::size).collect()
    }
}

/// Split Z/n into orbits under multiplication by q. Requires
/// gcd(q, n) = 1 so that multiplication by q permutes Z/n.
pub fn q_classes(n: u64, q: u128) -> Result<ClassPartition> {
    if n == 0 {
        return Err(Error::NotCoprime { q, n });
    }
    let q_red = (q % n as u128) as u64;
    if gcd_u128(q_red as u128, n as u128) != 1 {
        return Err(Error::NotCoprime { q, n });
    }
    let n_us = n as usize;
    let mut class_of = vec![usize::MAX; n_us];
    let mut classes = Vec::new();
    for a in 0..n {
        if class_of[a as usize] != usize::MAX {
            continue;
        }
        let idx = classes.len();
        let mut members = Vec::new();
        let mut x = a;
        loop {
            class_of[x as usize] = idx;
            members.push(x);
            x = (x as u128 * q_red as u128 % n as u128) as u64;
            if x == a {
                break;
            }
        }
        members.sort_unstable();
        classes.push(CyclotomicClass {
            representative: a,
            members,
        });
    }
    Ok(ClassPartition {
        n,
        q,
        classes,
        class_of,
    })
}

/// A primitive n-th root of unity, living in F_{q^s} with
/// s = ord_n(q), together with that field. For s = 1 the returned
/// context is the base itself.
///
/// The root is found by raising a random nonzero element to the power
/// (q^s - 1)/n and checking its exact order; the draw is seeded and
/// the number of attempts bounded.
pub fn primitive_nth_root(
    n: u64,
    base: &Arc<FieldCtx>,
    seed: u64,
) -> Result<(Arc<FieldCtx>, FFElement)> {
    let s = mult_order(base.cardinality(), n)?;
    let ext = extend(base, s, seed)?;
    let card = ext.cardinality();
    let exponent = (card - 1) / n as u128;
    let checks: Vec<u64> = prime_factors(n).into_iter().map(|l| n / l).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..256 {
        let gamma = FFElement::random(&ext, &mut rng);
        if gamma.is_zero() {
            continue;
        }
        let zeta = gamma.pow(exponent);
        if zeta.is_zero() {
            continue;
        }
        let full_order = checks.iter().all(|&e| !zeta.pow(e as u128).is_one());
        if full_order {
            return Ok((ext, zeta));
        }
    }
    Err(Error::SearchExhausted("no primitive root of unity found"))
}

/// Transcription of class i as a polynomial over F_q: coefficient 1
/// exactly at the exponents in the class.
pub fn epsilon_poly(part: &ClassPartition, i: usize, fq: &Arc<FieldCtx>) -> Result<Poly> {
    if i >= part.classes.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: part.classes.len(),
        });
    }
    if fq.cardinality() != part.q {
        return Err(Error::CtxMismatch);
    }
    let mut coeffs = vec![FFElement::zero(fq); part.n as usize];
    for &a in &part.classes[i].members {
        coeffs[a as usize] = FFElement::one(fq);
    }
    Ok(Poly::from_elem_coeffs(fq, coeffs))
}

/// The irreducible factor of x^n - 1 attached to class i: the product
/// of (x - zeta^a) over the class members, with coefficients pushed
/// down to F_q.
pub fn orbit_min_poly(part: &ClassPartition, i: usize, zeta: &FFElement) -> Result<Poly> {
    if i >= part.classes.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: part.classes.len(),
        });
    }
    let ext = zeta.ctx().clone();
    let base = if ext.cardinality() == part.q {
        ext.clone()
    } else {
        match ext.base() {
            Some(b) if b.cardinality() == part.q => b.clone(),
            _ => return Err(Error::CtxMismatch),
        }
    };
    let mut product = Poly::one(&ext);
    for &a in &part.classes[i].members {
        let root = zeta.pow(a as u128);
        let factor = Poly::from_elem_coeffs(&ext, vec![root.neg(), FFElement::one(&ext)]);
        product = product.mul(&factor);
    }
    if ext.id() == base.id() {
        return Ok(product);
    }
    let coeffs: Result<Vec<FFElement>> = product
        .coeffs()
        .iter()
        .map(|c| coerce_down(c, &base))
        .collect();
    Ok(Poly::from_elem_coeffs(&base, coeffs?))
}
