//! Linearized polynomials: sums of c_i x^(q^i) with c_i in F_q,
//! acting on F_{q^n} as F_q-linear maps.
//!
//! The map phi transports an ordinary polynomial mod x^n - 1 to its
//! linearized counterpart by turning x^i into x^(q^i). It is a ring
//! isomorphism from F_q[x]/(x^n - 1) onto the linearized polynomials
//! under addition and substitution, which is why composition can be
//! computed as a cyclic convolution of coefficient vectors.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{frobenius, FFElement, FieldCtx};
use crate::matrix::express;
use crate::poly::Poly;

/// A linearized polynomial with exponents reduced mod q^n - 1: the
/// coefficient vector always has length exactly n, coefficient i
/// multiplying x^(q^i).
#[derive(Clone)]
pub struct LinearizedPoly {
    base: Arc<FieldCtx>,
    coeffs: Vec<FFElement>,
}

impl PartialEq for LinearizedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.base.id() == other.base.id() && self.coeffs == other.coeffs
    }
}

impl Eq for LinearizedPoly {}

impl std::fmt::Debug for LinearizedPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LinearizedPoly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl LinearizedPoly {
    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }

    /// Number of q-power slots, the n of the ambient F_{q^n}.
    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FFElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FFElement::is_zero)
    }

    pub fn from_coeffs(base: &Arc<FieldCtx>, coeffs: Vec<FFElement>) -> Self {
        LinearizedPoly {
            base: base.clone(),
            coeffs,
        }
    }
}

/// Transport an ordinary polynomial to linearized form: x^i becomes
/// x^(q^i), exponents folding mod n.
pub fn phi(f: &Poly, n: usize) -> LinearizedPoly {
    let folded = f.mod_xn_minus_1(n);
    let mut coeffs = vec![FFElement::zero(f.ctx()); n];
    for (i, c) in folded.coeffs().iter().enumerate() {
        coeffs[i] = c.clone();
    }
    LinearizedPoly {
        base: f.ctx().clone(),
        coeffs,
    }
}

/// Scale a point by a coefficient that lives either in the point's
/// own field (degree 1 view) or in its base field.
pub(crate) fn coeff_term(alpha: &FFElement, c: &FFElement) -> FFElement {
    if alpha.ctx().id() == c.ctx().id() {
        alpha.mul(c)
    } else {
        alpha.scale(c)
    }
}

/// Evaluate at a point of F_{q^n}: walk the Frobenius orbit of alpha
/// once, scaling each conjugate by its coefficient. The element's
/// field must be an extension of degree n over the coefficient field.
pub fn lin_eval(l: &LinearizedPoly, alpha: &FFElement) -> Result<FFElement> {
    check_compatible(l, alpha)?;
    let mut acc = coeff_term(alpha, &l.coeffs[0]);
    let mut conj = alpha.clone();
    for c in &l.coeffs[1..] {
        conj = frobenius(&conj, 1);
        if !c.is_zero() {
            acc = acc.add(&coeff_term(&conj, c));
        }
    }
    Ok(acc)
}

/// Evaluation reusing a precomputed conjugate orbit
/// [alpha, alpha^q, ..., alpha^(q^(n-1))].
pub fn lin_eval_conjugates(l: &LinearizedPoly, conjugates: &[FFElement]) -> FFElement {
    assert_eq!(conjugates.len(), l.n(), "conjugate orbit length mismatch");
    let mut acc = coeff_term(&conjugates[0], &l.coeffs[0]);
    for (c, conj) in l.coeffs.iter().zip(conjugates).skip(1) {
        if !c.is_zero() {
            acc = acc.add(&coeff_term(conj, c));
        }
    }
    acc
}

/// Substitution composition (l after k), computed as the cyclic
/// convolution of the coefficient vectors. This is exactly
/// multiplication of the phi pre-images mod x^n - 1, and it is valid
/// because the coefficients lie in F_q and are fixed by Frobenius.
pub fn lin_compose(l: &LinearizedPoly, k: &LinearizedPoly) -> Result<LinearizedPoly> {
    if l.base.id() != k.base.id() || l.n() != k.n() {
        return Err(Error::CtxMismatch);
    }
    let n = l.n();
    let mut coeffs = vec![FFElement::zero(&l.base); n];
    for (i, a) in l.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in k.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let t = (i + j) % n;
            coeffs[t] = coeffs[t].add(&a.mul(b));
        }
    }
    Ok(LinearizedPoly {
        base: l.base.clone(),
        coeffs,
    })
}

fn check_compatible(l: &LinearizedPoly, alpha: &FFElement) -> Result<()> {
    let ctx = alpha.ctx();
    // n = 1 views the coefficient field as its own trivial extension.
    let ok = if l.n() == 1 {
        ctx.id() == l.base.id()
    } else {
        match ctx.base() {
            Some(b) => b.id() == l.base.id() && ctx.degree() == l.n(),
            None => false,
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::CtxMismatch)
    }
}

/// The monic q-polynomial of least q-degree annihilating alpha. Its
/// q-degree can reach n, so the coefficient vector is not reduced mod
/// x^(q^n) - x: it has length qdeg + 1 with a leading 1.
#[derive(Clone)]
pub struct MinimalQPoly {
    base: Arc<FieldCtx>,
    coeffs: Vec<FFElement>,
}

impl PartialEq for MinimalQPoly {
    fn eq(&self, other: &Self) -> bool {
        self.base.id() == other.base.id() && self.coeffs == other.coeffs
    }
}

impl Eq for MinimalQPoly {}

impl std::fmt::Debug for MinimalQPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MinimalQPoly(qdeg {})", self.qdeg())
    }
}

impl MinimalQPoly {
    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }

    pub fn qdeg(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients c_0 .. c_qdeg of sum c_i x^(q^i), c_qdeg = 1.
    pub fn coeffs(&self) -> &[FFElement] {
        &self.coeffs
    }

    /// Evaluate at any point of an extension of degree >= 1 over the
    /// same base field.
    pub fn eval(&self, alpha: &FFElement) -> Result<FFElement> {
        if alpha.ctx().base_cardinality() != self.base.cardinality() {
            return Err(Error::CtxMismatch);
        }
        let mut acc = coeff_term(alpha, &self.coeffs[0]);
        let mut conj = alpha.clone();
        for c in &self.coeffs[1..] {
            conj = frobenius(&conj, 1);
            if !c.is_zero() {
                acc = acc.add(&coeff_term(&conj, c));
            }
        }
        Ok(acc)
    }
}

/// Minimal q-polynomial of alpha over the base field of its context:
/// the first linear dependency among the Frobenius conjugates of
/// alpha, normalized monic. For alpha = 0 this is x itself.
pub fn minimal_q_poly(alpha: &FFElement) -> Result<MinimalQPoly> {
    let ctx = alpha.ctx();
    let base = match ctx.base() {
        Some(b) => b.clone(),
        None => ctx.clone(),
    };
    if alpha.is_zero() {
        let one = FFElement::one(&base);
        return Ok(MinimalQPoly {
            base,
            coeffs: vec![one],
        });
    }
    let n = ctx.degree();
    let chunk = base.limbs();
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut conj = alpha.clone();
    for j in 1..=n {
        rows.push(conj.coords().to_vec());
        conj = frobenius(&conj, 1);
        if let Some(combo) = express(&base, &rows, conj.coords(), chunk)? {
            let mut coeffs: Vec<FFElement> = combo
                .into_iter()
                .map(|c| FFElement::from_raw(&base, c).neg())
                .collect();
            coeffs.push(FFElement::one(&base));
            debug_assert_eq!(coeffs.len(), j + 1);
            return Ok(MinimalQPoly { base, coeffs });
        }
    }
    unreachable!("the conjugate orbit closes after at most n steps")
}
