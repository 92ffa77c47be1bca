//! Dense univariate polynomials over a field context.
//!
//! Coefficients are stored lowest degree first and kept trimmed: the
//! zero polynomial has an empty coefficient vector, anything else has
//! a nonzero leading coefficient.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FFElement, FieldCtx};
use crate::num::prime_factors_u128;

#[derive(Clone)]
pub struct Poly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<FFElement>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id() == other.ctx.id() && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl Poly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        Poly {
            ctx: ctx.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Poly {
            ctx: ctx.clone(),
            coeffs: vec![FFElement::one(ctx)],
        }
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> Self {
        Poly {
            ctx: ctx.clone(),
            coeffs: vec![FFElement::zero(ctx), FFElement::one(ctx)],
        }
    }

    /// x^k
    pub fn monomial(ctx: &Arc<FieldCtx>, k: usize) -> Self {
        let mut coeffs = vec![FFElement::zero(ctx); k + 1];
        coeffs[k] = FFElement::one(ctx);
        Poly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn constant(c: FFElement) -> Self {
        let ctx = c.ctx().clone();
        let coeffs = if c.is_zero() { Vec::new() } else { vec![c] };
        Poly { ctx, coeffs }
    }

    pub fn from_elem_coeffs(ctx: &Arc<FieldCtx>, coeffs: Vec<FFElement>) -> Self {
        let mut p = Poly {
            ctx: ctx.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    /// Convenience constructor from integer coefficients, reduced mod p.
    pub fn from_int_coeffs(ctx: &Arc<FieldCtx>, coeffs: &[u64]) -> Self {
        let elems = coeffs
            .iter()
            .map(|&c| FFElement::from_int(ctx, c))
            .collect();
        Poly::from_elem_coeffs(ctx, elems)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(FFElement::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub(crate) fn ctx_id(&self) -> u64 {
        self.ctx.id()
    }

    /// Degree, None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of x^i, zero beyond the stored length.
    pub fn coeff(&self, i: usize) -> FFElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| FFElement::zero(&self.ctx))
    }

    pub fn coeffs(&self) -> &[FFElement] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&FFElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(FFElement::is_one)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Poly::from_elem_coeffs(&self.ctx, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        Poly::from_elem_coeffs(&self.ctx, coeffs)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(FFElement::neg).collect();
        Poly::from_elem_coeffs(&self.ctx, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut coeffs =
            vec![FFElement::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Poly::from_elem_coeffs(&self.ctx, coeffs)
    }

    pub fn mul_scalar(&self, c: &FFElement) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect();
        Poly::from_elem_coeffs(&self.ctx, coeffs)
    }

    /// Quotient and remainder with remainder degree below deg(divisor).
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor.deg().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Poly::zero(&self.ctx), self.clone()));
        }
        let mut quot = vec![FFElement::zero(&self.ctx); rem.len() - d];
        for top in (d..rem.len()).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let factor = rem[top].mul(&lead_inv);
            for j in 0..=d {
                let t = divisor.coeffs[j].mul(&factor);
                rem[top - d + j] = rem[top - d + j].sub(&t);
            }
            quot[top - d] = factor;
        }
        Ok((
            Poly::from_elem_coeffs(&self.ctx, quot),
            Poly::from_elem_coeffs(&self.ctx, rem),
        ))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Monic multiple of self (unit normalization).
    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        if lead.is_one() {
            return Ok(self.clone());
        }
        Ok(self.mul_scalar(&lead.inv()?))
    }

    pub fn eval(&self, at: &FFElement) -> FFElement {
        let mut acc = FFElement::zero(at.ctx());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }

    /// Evaluate at a point of an extension of the coefficient field,
    /// lifting each coefficient along the way.
    pub fn eval_ext(&self, at: &FFElement) -> Result<FFElement> {
        let mut acc = FFElement::zero(at.ctx());
        for c in self.coeffs.iter().rev() {
            let lifted = crate::field::embed(c, at.ctx())?;
            acc = acc.mul(at).add(&lifted);
        }
        Ok(acc)
    }

    /// self^e mod m by square and multiply.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Result<Self> {
        let mut result = Poly::one(&self.ctx).rem(m)?;
        let mut sq = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&sq).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq).rem(m)?;
            }
        }
        Ok(result)
    }

    /// Remainder mod x^n - 1: exponents fold mod n.
    pub fn mod_xn_minus_1(&self, n: usize) -> Self {
        let mut coeffs = vec![FFElement::zero(&self.ctx); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = i % n;
            coeffs[j] = coeffs[j].add(c);
        }
        Poly::from_elem_coeffs(&self.ctx, coeffs)
    }
}

/// Monic greatest common divisor.
pub fn gcd(f: &Poly, g: &Poly) -> Result<Poly> {
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = a.rem(&b)?;
        a = b;
        b = r;
    }
    if a.is_zero() {
        Ok(a)
    } else {
        a.monic()
    }
}

/// Monic irreducibility test over the coefficient field: x^(Q^d)
/// congruent to x, and for every prime divisor l of d the power
/// x^(Q^(d/l)) must not collapse, checked through gcds.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let d = f.deg().unwrap();
    if d == 0 {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    let q = f.ctx().cardinality();
    let x = Poly::x(f.ctx()).rem(f)?;
    // q_power[j] holds x^(Q^(j+1)) mod f.
    let mut q_power = Vec::with_capacity(d);
    let mut t = x.clone();
    for _ in 0..d {
        t = t.pow_mod(q, f)?;
        q_power.push(t.clone());
    }
    if q_power[d - 1] != x {
        return Ok(false);
    }
    for l in prime_factors_u128(d as u128) {
        let j = d / l as usize;
        let diff = q_power[j - 1].sub(&x);
        let g = gcd(&diff, f)?;
        if g.deg() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for Poly {
    /// Sum form `c*x^k + ... + c0`, zero terms omitted, coefficients in
    /// the element grammar and parenthesized when they carry more than
    /// one residue.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let multi = c.ctx().limbs() > 1;
            let cs = if multi {
                format!("({})", c)
            } else {
                c.to_string()
            };
            match i {
                0 => write!(f, "{cs}")?,
                _ => {
                    if c.is_one() {
                        if i == 1 {
                            write!(f, "x")?;
                        } else {
                            write!(f, "x^{i}")?;
                        }
                    } else if i == 1 {
                        write!(f, "{cs}*x")?;
                    } else {
                        write!(f, "{cs}*x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
