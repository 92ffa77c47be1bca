//! Finite field towers with exact arithmetic.
//!
//! A [`FieldCtx`] describes the prime field F_p, an extension F_{p^m}
//! over it, or a second extension F_{q^k} over that. Two levels above
//! the prime field is a hard ceiling; [`extend`] refuses to go deeper.
//! Elements are flat vectors of residues mod p. An element of F_{q^k}
//! with q = p^m stores k*m residues, grouped in chunks of m, one chunk
//! per coordinate over the middle field.
//!
//! All randomness is drawn from ChaCha8 seeded with caller-supplied
//! values, so every context and every sampled element is reproducible
//! from the seeds alone.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::num::is_prime_u64;
use crate::poly::{self, Poly};

/// Characteristics must stay strictly below this so products of two
/// residues fit in a u64 without widening.
pub const MAX_PRIME: u64 = 1 << 31;

static CTX_COUNTER: AtomicU64 = AtomicU64::new(1);

/// Description of one field in a tower. Obtain one through
/// [`make_field`] or [`extend`] and share it behind an [`Arc`];
/// elements keep a reference to their context.
pub struct FieldCtx {
    id: u64,
    p: u64,
    base: Option<Arc<FieldCtx>>,
    /// Modulus coefficients c_0..c_d over the base field, flattened to
    /// base limbs, monic with c_d = 1. Empty for the prime field.
    modulus: Vec<u64>,
    degree: usize,
    limbs: usize,
    cardinality: u128,
    seed: u64,
    frob: OnceLock<Vec<Vec<u64>>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldCtx(#{}, p={}, degree={}, cardinality={})",
            self.id, self.p, self.degree, self.cardinality
        )
    }
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Degree over the base field; 1 for the prime field itself.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of residues an element of this field carries.
    pub fn limbs(&self) -> usize {
        self.limbs
    }

    pub fn cardinality(&self) -> u128 {
        self.cardinality
    }

    pub fn base(&self) -> Option<&Arc<FieldCtx>> {
        self.base.as_ref()
    }

    /// 0 for F_p, 1 for F_{p^m}, 2 for F_{q^k}.
    pub fn depth(&self) -> usize {
        match &self.base {
            None => 0,
            Some(b) => 1 + b.depth(),
        }
    }

    /// Seed that produced the modulus, 0 when the modulus was given
    /// explicitly or the field is prime.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub(crate) fn id(&self) -> u64 {
        self.id
    }

    /// Cardinality of the base field, p for the prime field itself.
    pub fn base_cardinality(&self) -> u128 {
        match &self.base {
            None => self.p as u128,
            Some(b) => b.cardinality,
        }
    }

    fn base_limbs(&self) -> usize {
        match &self.base {
            None => 1,
            Some(b) => b.limbs,
        }
    }

    /// The defining polynomial over the base field, None for F_p.
    pub fn modulus_poly(self: &Arc<Self>) -> Option<Poly> {
        let base = self.base.as_ref()?;
        let bl = base.limbs;
        let coeffs: Vec<FFElement> = (0..=self.degree)
            .map(|i| FFElement {
                ctx: base.clone(),
                coords: self.modulus[i * bl..(i + 1) * bl].to_vec(),
            })
            .collect();
        Some(Poly::from_elem_coeffs(base, coeffs))
    }

    // ----- residue arithmetic on raw slices -----

    fn pf_add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn pf_sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn pf_mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub(crate) fn add_in(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..a.len() {
            out[i] = self.pf_add(a[i], b[i]);
        }
    }

    pub(crate) fn sub_in(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..a.len() {
            out[i] = self.pf_sub(a[i], b[i]);
        }
    }

    pub(crate) fn neg_in(&self, a: &[u64], out: &mut [u64]) {
        for i in 0..a.len() {
            out[i] = if a[i] == 0 { 0 } else { self.p - a[i] };
        }
    }

    pub(crate) fn scale_int_in(&self, a: &[u64], c: u64, out: &mut [u64]) {
        let c = c % self.p;
        for i in 0..a.len() {
            out[i] = self.pf_mul(a[i], c);
        }
    }

    /// Product of two elements of this field, given as coordinate
    /// slices, reduced by the modulus.
    pub(crate) fn mul_in(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        match &self.base {
            None => vec![self.pf_mul(a[0], b[0])],
            Some(base) => {
                let d = self.degree;
                let bl = base.limbs;
                let mut conv = vec![0u64; (2 * d - 1) * bl];
                let mut tmp = vec![0u64; bl];
                for i in 0..d {
                    let ai = &a[i * bl..(i + 1) * bl];
                    if ai.iter().all(|&x| x == 0) {
                        continue;
                    }
                    for j in 0..d {
                        let bj = &b[j * bl..(j + 1) * bl];
                        if bj.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let prod = base.mul_in(ai, bj);
                        let dst = &mut conv[(i + j) * bl..(i + j + 1) * bl];
                        tmp.copy_from_slice(dst);
                        base.add_in(&tmp, &prod, dst);
                    }
                }
                self.reduce_in(&mut conv);
                conv.truncate(d * bl);
                conv
            }
        }
    }

    /// Reduce a coefficient vector (chunks over the base field, any
    /// length that is a multiple of the chunk size) by the monic
    /// modulus, in place. Only the leading d chunks remain meaningful.
    fn reduce_in(&self, conv: &mut [u64]) {
        let base = self.base.as_ref().expect("reduce on a prime field");
        let d = self.degree;
        let bl = base.limbs;
        let chunks = conv.len() / bl;
        let mut tmp = vec![0u64; bl];
        for top in (d..chunks).rev() {
            let lead = conv[top * bl..(top + 1) * bl].to_vec();
            if lead.iter().all(|&x| x == 0) {
                continue;
            }
            for x in conv[top * bl..(top + 1) * bl].iter_mut() {
                *x = 0;
            }
            for j in 0..d {
                let mj = &self.modulus[j * bl..(j + 1) * bl];
                if mj.iter().all(|&x| x == 0) {
                    continue;
                }
                let prod = base.mul_in(&lead, mj);
                let dst = &mut conv[(top - d + j) * bl..(top - d + j + 1) * bl];
                tmp.copy_from_slice(dst);
                base.sub_in(&tmp, &prod, dst);
            }
        }
    }

    /// Multiply an element of this field by a scalar from the base
    /// field, chunk by chunk.
    pub(crate) fn mul_base_in(&self, a: &[u64], c: &[u64]) -> Vec<u64> {
        match &self.base {
            None => vec![self.pf_mul(a[0], c[0])],
            Some(base) => {
                let bl = base.limbs;
                let mut out = vec![0u64; a.len()];
                for i in 0..self.degree {
                    let prod = base.mul_in(&a[i * bl..(i + 1) * bl], c);
                    out[i * bl..(i + 1) * bl].copy_from_slice(&prod);
                }
                out
            }
        }
    }

    pub(crate) fn pow_in(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut result = self.one_coords();
        let mut sq = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_in(&result, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul_in(&sq, &sq);
            }
        }
        result
    }

    pub(crate) fn inv_in(&self, a: &[u64]) -> Result<Vec<u64>> {
        if a.iter().all(|&x| x == 0) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_in(a, self.cardinality - 2))
    }

    pub(crate) fn zero_coords(&self) -> Vec<u64> {
        vec![0u64; self.limbs]
    }

    pub(crate) fn one_coords(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.limbs];
        v[0] = 1;
        v
    }

    /// Images of the power basis under x -> x^Q with Q the base field
    /// cardinality, built once per context.
    fn frob_table(&self) -> &Vec<Vec<u64>> {
        self.frob.get_or_init(|| {
            let bl = self.base_limbs();
            let q = self.base_cardinality();
            (0..self.degree)
                .map(|j| {
                    let mut basis = vec![0u64; self.limbs];
                    basis[j * bl] = 1;
                    self.pow_in(&basis, q)
                })
                .collect()
        })
    }

    /// One application of x -> x^Q, Q the base field cardinality.
    pub(crate) fn frob_in(&self, a: &[u64]) -> Vec<u64> {
        if self.base.is_none() {
            return a.to_vec();
        }
        let bl = self.base_limbs();
        let table = self.frob_table();
        let mut out = vec![0u64; self.limbs];
        let mut tmp = vec![0u64; self.limbs];
        for j in 0..self.degree {
            let cj = &a[j * bl..(j + 1) * bl];
            if cj.iter().all(|&x| x == 0) {
                continue;
            }
            let term = self.mul_base_in(&table[j], cj);
            tmp.copy_from_slice(&out);
            self.add_in(&tmp, &term, &mut out);
        }
        out
    }
}

fn prime_ctx(p: u64) -> Result<Arc<FieldCtx>> {
    if p >= MAX_PRIME {
        return Err(Error::PrimeTooLarge(p));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(Arc::new(FieldCtx {
        id: CTX_COUNTER.fetch_add(1, Ordering::Relaxed),
        p,
        base: None,
        modulus: Vec::new(),
        degree: 1,
        limbs: 1,
        cardinality: p as u128,
        seed: 0,
        frob: OnceLock::new(),
    }))
}

/// Build F_{p^m}. For m = 1 this is the prime field; for m > 1 a
/// monic irreducible modulus of degree m is drawn from the seed.
pub fn make_field(p: u64, m: u64, seed: u64) -> Result<Arc<FieldCtx>> {
    let prime = prime_ctx(p)?;
    if m <= 1 {
        if m == 0 {
            return Err(Error::Parse("extension degree must be positive".into()));
        }
        return Ok(prime);
    }
    extend(&prime, m, seed)
}

fn build_ext(base: &Arc<FieldCtx>, modulus_flat: Vec<u64>, k: usize, seed: u64) -> Result<Arc<FieldCtx>> {
    let cardinality = base
        .cardinality
        .checked_pow(k as u32)
        .ok_or(Error::CardinalityTooLarge {
            p: base.cardinality,
            degree: k as u64,
        })?;
    Ok(Arc::new(FieldCtx {
        id: CTX_COUNTER.fetch_add(1, Ordering::Relaxed),
        p: base.p,
        base: Some(base.clone()),
        modulus: modulus_flat,
        degree: k,
        limbs: k * base.limbs,
        cardinality,
        seed,
        frob: OnceLock::new(),
    }))
}

/// Build F_{q^k} over an existing context. k = 1 returns the base
/// itself. The modulus is found by seeded random search among monic
/// polynomials of degree k.
pub fn extend(base: &Arc<FieldCtx>, k: u64, seed: u64) -> Result<Arc<FieldCtx>> {
    if k == 0 {
        return Err(Error::Parse("extension degree must be positive".into()));
    }
    if k == 1 {
        return Ok(base.clone());
    }
    if base.depth() >= 2 {
        return Err(Error::TowerTooDeep);
    }
    let k = k as usize;
    // Fail early on impossible sizes before searching for a modulus.
    base.cardinality
        .checked_pow(k as u32)
        .ok_or(Error::CardinalityTooLarge {
            p: base.cardinality,
            degree: k as u64,
        })?;
    let bl = base.limbs;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tries = 768 * (k as u64 + 1);
    for _ in 0..tries {
        let mut flat = vec![0u64; (k + 1) * bl];
        for x in flat[..k * bl].iter_mut() {
            *x = rng.random_range(0..base.p);
        }
        flat[k * bl] = 1;
        let cand = poly_from_flat(base, &flat, k);
        if poly::is_irreducible(&cand)? {
            return build_ext(base, flat, k, seed);
        }
    }
    Err(Error::SearchExhausted("no irreducible modulus found"))
}

/// Build an extension on a caller-supplied monic irreducible modulus.
/// Used where the defining polynomial must be pinned exactly.
pub fn extend_with_modulus(base: &Arc<FieldCtx>, modulus: &Poly) -> Result<Arc<FieldCtx>> {
    if base.depth() >= 2 {
        return Err(Error::TowerTooDeep);
    }
    if modulus.ctx_id() != base.id {
        return Err(Error::CtxMismatch);
    }
    let k = match modulus.deg() {
        Some(d) if d >= 2 => d,
        Some(1) => return Err(Error::Parse("degree 1 modulus describes the base itself".into())),
        _ => return Err(Error::NotMonic),
    };
    if !poly::is_irreducible(modulus)? {
        return Err(Error::Reducible);
    }
    let bl = base.limbs;
    let mut flat = vec![0u64; (k + 1) * bl];
    for i in 0..=k {
        flat[i * bl..(i + 1) * bl].copy_from_slice(modulus.coeff(i).coords());
    }
    build_ext(base, flat, k, 0)
}

fn poly_from_flat(base: &Arc<FieldCtx>, flat: &[u64], k: usize) -> Poly {
    let bl = base.limbs;
    let coeffs: Vec<FFElement> = (0..=k)
        .map(|i| FFElement {
            ctx: base.clone(),
            coords: flat[i * bl..(i + 1) * bl].to_vec(),
        })
        .collect();
    Poly::from_elem_coeffs(base, coeffs)
}

/// Parse a field description of the form "p=<int>,m=<int>[,seed=<int>]".
pub fn parse_field_spec(s: &str) -> Result<(u64, u64, Option<u64>)> {
    let mut p = None;
    let mut m = None;
    let mut seed = None;
    for part in s.split(',') {
        let part = part.trim();
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer in field spec: {value:?}")))?;
        match key.trim() {
            "p" => p = Some(value),
            "m" => m = Some(value),
            "seed" => seed = Some(value),
            other => return Err(Error::Parse(format!("unknown field spec key {other:?}"))),
        }
    }
    let p = p.ok_or_else(|| Error::Parse("field spec is missing p".into()))?;
    let m = m.ok_or_else(|| Error::Parse("field spec is missing m".into()))?;
    Ok((p, m, seed))
}

/// One element of a specific field context.
#[derive(Clone)]
pub struct FFElement {
    ctx: Arc<FieldCtx>,
    coords: Vec<u64>,
}

impl PartialEq for FFElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id == other.ctx.id && self.coords == other.coords
    }
}

impl Eq for FFElement {}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FFElement({} in {:?})", self, self.ctx)
    }
}

impl FFElement {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        FFElement {
            ctx: ctx.clone(),
            coords: ctx.zero_coords(),
        }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        FFElement {
            ctx: ctx.clone(),
            coords: ctx.one_coords(),
        }
    }

    /// Embed an integer along the unit, reducing it mod p.
    pub fn from_int(ctx: &Arc<FieldCtx>, value: u64) -> Self {
        let mut coords = ctx.zero_coords();
        coords[0] = value % ctx.p;
        FFElement {
            ctx: ctx.clone(),
            coords,
        }
    }

    /// Validated constructor from raw residues.
    pub fn from_coords(ctx: &Arc<FieldCtx>, coords: Vec<u64>) -> Result<Self> {
        if coords.len() != ctx.limbs {
            return Err(Error::CoordCount {
                got: coords.len(),
                need: ctx.limbs,
            });
        }
        for &c in &coords {
            if c >= ctx.p {
                return Err(Error::CoordRange { value: c, p: ctx.p });
            }
        }
        Ok(FFElement {
            ctx: ctx.clone(),
            coords,
        })
    }

    pub(crate) fn from_raw(ctx: &Arc<FieldCtx>, coords: Vec<u64>) -> Self {
        debug_assert_eq!(coords.len(), ctx.limbs);
        FFElement {
            ctx: ctx.clone(),
            coords,
        }
    }

    /// Element number `index` in the enumeration that steps the lowest
    /// coordinate fastest. Inverse of [`FFElement::to_index`].
    pub fn from_index(ctx: &Arc<FieldCtx>, index: u128) -> Result<Self> {
        if index >= ctx.cardinality {
            return Err(Error::IndexOutOfRange {
                index: usize::MAX,
                len: 0,
            });
        }
        let p = ctx.p as u128;
        let mut rest = index;
        let coords = (0..ctx.limbs)
            .map(|_| {
                let digit = (rest % p) as u64;
                rest /= p;
                digit
            })
            .collect();
        Ok(FFElement {
            ctx: ctx.clone(),
            coords,
        })
    }

    pub fn to_index(&self) -> u128 {
        let p = self.ctx.p as u128;
        let mut acc = 0u128;
        for &c in self.coords.iter().rev() {
            acc = acc * p + c as u128;
        }
        acc
    }

    pub fn random<R: Rng + ?Sized>(ctx: &Arc<FieldCtx>, rng: &mut R) -> Self {
        let coords = (0..ctx.limbs).map(|_| rng.random_range(0..ctx.p)).collect();
        FFElement {
            ctx: ctx.clone(),
            coords,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    fn check_ctx(&self, other: &Self) {
        assert_eq!(
            self.ctx.id, other.ctx.id,
            "field context mismatch in element arithmetic"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ctx(other);
        let mut coords = vec![0u64; self.coords.len()];
        self.ctx.add_in(&self.coords, &other.coords, &mut coords);
        FFElement {
            ctx: self.ctx.clone(),
            coords,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_ctx(other);
        let mut coords = vec![0u64; self.coords.len()];
        self.ctx.sub_in(&self.coords, &other.coords, &mut coords);
        FFElement {
            ctx: self.ctx.clone(),
            coords,
        }
    }

    pub fn neg(&self) -> Self {
        let mut coords = vec![0u64; self.coords.len()];
        self.ctx.neg_in(&self.coords, &mut coords);
        FFElement {
            ctx: self.ctx.clone(),
            coords,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ctx(other);
        FFElement {
            ctx: self.ctx.clone(),
            coords: self.ctx.mul_in(&self.coords, &other.coords),
        }
    }

    pub fn square(&self) -> Self {
        FFElement {
            ctx: self.ctx.clone(),
            coords: self.ctx.mul_in(&self.coords, &self.coords),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(FFElement {
            ctx: self.ctx.clone(),
            coords: self.ctx.inv_in(&self.coords)?,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other);
        let inv = other.inv()?;
        Ok(self.mul(&inv))
    }

    pub fn pow(&self, e: u128) -> Self {
        FFElement {
            ctx: self.ctx.clone(),
            coords: self.ctx.pow_in(&self.coords, e),
        }
    }

    /// Multiply by an integer scalar, acting residue by residue.
    pub fn scale_int(&self, c: u64) -> Self {
        let mut coords = vec![0u64; self.coords.len()];
        self.ctx.scale_int_in(&self.coords, c, &mut coords);
        FFElement {
            ctx: self.ctx.clone(),
            coords,
        }
    }

    /// Multiply by a scalar from the base field of this element's
    /// context.
    pub fn scale(&self, c: &FFElement) -> Self {
        match self.ctx.base() {
            None => {
                self.check_ctx(c);
                self.mul(c)
            }
            Some(base) => {
                assert_eq!(base.id, c.ctx.id, "scalar is not from the base field");
                FFElement {
                    ctx: self.ctx.clone(),
                    coords: self.ctx.mul_base_in(&self.coords, &c.coords),
                }
            }
        }
    }

    /// Coordinate `j` over the base field, as a slice of residues.
    pub fn base_coord(&self, j: usize) -> &[u64] {
        let bl = self.ctx.base_limbs();
        &self.coords[j * bl..(j + 1) * bl]
    }

    /// Coordinate `j` over the base field, as a base field element.
    pub fn base_coord_elem(&self, j: usize) -> FFElement {
        match self.ctx.base() {
            None => self.clone(),
            Some(base) => FFElement {
                ctx: base.clone(),
                coords: self.base_coord(j).to_vec(),
            },
        }
    }

    /// Nested array form: a residue for the prime field, otherwise an
    /// array of base field values, lowest coordinate first.
    pub fn to_json(&self) -> Value {
        fn go(ctx: &FieldCtx, coords: &[u64]) -> Value {
            match ctx.base() {
                None => json!(coords[0]),
                Some(base) => {
                    let bl = base.limbs;
                    let items: Vec<Value> = (0..ctx.degree)
                        .map(|j| go(base, &coords[j * bl..(j + 1) * bl]))
                        .collect();
                    Value::Array(items)
                }
            }
        }
        go(&self.ctx, &self.coords)
    }
}

impl fmt::Display for FFElement {
    /// Text form mirrors the input grammar: a bare residue for the
    /// prime field, comma separated residues one level up, and
    /// semicolon separated coordinate groups two levels up.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ctx.depth() {
            0 => write!(f, "{}", self.coords[0]),
            1 => {
                let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
            _ => {
                let bl = self.ctx.base_limbs();
                let groups: Vec<String> = (0..self.ctx.degree)
                    .map(|j| {
                        self.coords[j * bl..(j + 1) * bl]
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                write!(f, "{}", groups.join(";"))
            }
        }
    }
}

/// Parse the element grammar produced by `Display`.
pub fn parse_element(ctx: &Arc<FieldCtx>, s: &str) -> Result<FFElement> {
    let mut coords = Vec::with_capacity(ctx.limbs());
    for group in s.split(';') {
        for part in group.split(',') {
            let part = part.trim();
            let v: u64 = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad coordinate {part:?}")))?;
            coords.push(v);
        }
    }
    let bl = ctx.base_limbs();
    let groups = s.split(';').count();
    if ctx.depth() == 2 {
        if groups != ctx.degree() {
            return Err(Error::CoordCount {
                got: groups,
                need: ctx.degree(),
            });
        }
        for group in s.split(';') {
            let parts = group.split(',').count();
            if parts != bl {
                return Err(Error::CoordCount { got: parts, need: bl });
            }
        }
    }
    FFElement::from_coords(ctx, coords)
}

/// i-fold Frobenius x -> x^(Q^i) with Q the cardinality of the base
/// field of `a`'s context. The exponent is reduced mod the degree.
pub fn frobenius(a: &FFElement, i: u64) -> FFElement {
    let d = a.ctx().degree() as u64;
    let i = i % d;
    let mut coords = a.coords().to_vec();
    for _ in 0..i {
        coords = a.ctx().frob_in(&coords);
    }
    FFElement::from_raw(a.ctx(), coords)
}

/// Relative trace onto F_{Q^m} inside F_{Q^n}, where n is the degree
/// of `a`'s context over its base and m | n. The value is returned in
/// the original context.
pub fn rel_trace(a: &FFElement, m: u64) -> Result<FFElement> {
    let n = a.ctx().degree() as u64;
    if m == 0 || n % m != 0 {
        return Err(Error::NotADivisor { m, n });
    }
    let steps = n / m;
    let mut acc = a.clone();
    let mut t = a.clone();
    for _ in 1..steps {
        for _ in 0..m {
            t = frobenius(&t, 1);
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// Reinterpret an element of an extension as an element of its base
/// field. Fails with NotInSubfield when any higher coordinate is set.
pub fn coerce_down(a: &FFElement, target: &Arc<FieldCtx>) -> Result<FFElement> {
    if a.ctx().id == target.id {
        return Ok(a.clone());
    }
    match a.ctx().base() {
        Some(base) if base.id == target.id => {
            let bl = base.limbs();
            if a.coords()[bl..].iter().any(|&c| c != 0) {
                return Err(Error::NotInSubfield);
            }
            Ok(FFElement::from_raw(target, a.coords()[..bl].to_vec()))
        }
        _ => Err(Error::CtxMismatch),
    }
}

/// Whether `a` lies in the intermediate field F_{Q^m}, for m dividing
/// the degree of `a`'s context over its base.
pub fn subfield_member(a: &FFElement, m: u64) -> Result<bool> {
    let n = a.ctx().degree() as u64;
    if m == 0 || n % m != 0 {
        return Err(Error::NotADivisor { m, n });
    }
    let mut t = a.clone();
    for _ in 0..m {
        t = frobenius(&t, 1);
    }
    Ok(t == *a)
}

/// Lift a base field element into an extension built over its context.
pub fn embed(a: &FFElement, ext: &Arc<FieldCtx>) -> Result<FFElement> {
    if a.ctx().id == ext.id {
        return Ok(a.clone());
    }
    match ext.base() {
        Some(base) if base.id == a.ctx().id => {
            let mut coords = ext.zero_coords();
            coords[..a.coords().len()].copy_from_slice(a.coords());
            Ok(FFElement::from_raw(ext, coords))
        }
        _ => Err(Error::CtxMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f7 = make_field(7, 1, 0).unwrap();
        let a = FFElement::from_int(&f7, 3);
        let b = FFElement::from_int(&f7, 5);
        assert_eq!(a.add(&b), FFElement::from_int(&f7, 1));
        assert_eq!(a.mul(&b), FFElement::from_int(&f7, 1));
        assert_eq!(a.inv().unwrap(), FFElement::from_int(&f7, 5));
        assert_eq!(a.pow(6), FFElement::one(&f7));
        assert!(FFElement::zero(&f7).inv().is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_field(6, 1, 0), Err(Error::NotPrime(6))));
        assert!(matches!(make_field(1, 1, 0), Err(Error::NotPrime(1))));
        assert!(matches!(
            make_field(MAX_PRIME, 1, 0),
            Err(Error::PrimeTooLarge(_))
        ));
        let f4 = make_field(2, 2, 0).unwrap();
        let f16 = extend(&f4, 2, 0).unwrap();
        assert!(matches!(extend(&f16, 2, 0), Err(Error::TowerTooDeep)));
        assert!(matches!(
            make_field(2, 200, 0),
            Err(Error::CardinalityTooLarge { .. })
        ));
    }

    #[test]
    fn extension_multiplication_respects_modulus() {
        // x * x^2 must reduce to the tail of the modulus in F_8.
        let f8 = make_field(2, 3, 1).unwrap();
        let x = FFElement::from_coords(&f8, vec![0, 1, 0]).unwrap();
        let x2 = FFElement::from_coords(&f8, vec![0, 0, 1]).unwrap();
        let x3 = x.mul(&x2);
        let modulus = f8.modulus_poly().unwrap();
        let f2 = f8.base().unwrap().clone();
        let mut expect = FFElement::zero(&f8);
        for i in 0..3 {
            let c = modulus.coeff(i);
            if !c.is_zero() {
                let mut coords = f8.zero_coords();
                coords[i] = c.coords()[0];
                expect = expect.add(&FFElement::from_raw(&f8, coords));
            }
        }
        assert_eq!(x3, expect.neg());
        assert_eq!(f2.cardinality(), 2);
    }

    #[test]
    fn frobenius_is_identity_on_base() {
        let f9 = make_field(3, 2, 0).unwrap();
        let f81 = extend(&f9, 2, 0).unwrap();
        for v in 0..9u64 {
            let a = FFElement::from_coords(&f9, vec![v % 3, v / 3]).unwrap();
            let lifted = embed(&a, &f81).unwrap();
            assert_eq!(frobenius(&lifted, 1), lifted.pow(9));
            assert_eq!(frobenius(&lifted, 2), lifted);
        }
    }

    #[test]
    fn index_roundtrip() {
        let f8 = make_field(2, 3, 0).unwrap();
        for i in 0..8u128 {
            let a = FFElement::from_index(&f8, i).unwrap();
            assert_eq!(a.to_index(), i);
        }
        assert!(FFElement::from_index(&f8, 8).is_err());
    }

    #[test]
    fn display_parse_roundtrip() {
        let f9 = make_field(3, 2, 5).unwrap();
        let f81 = extend(&f9, 2, 5).unwrap();
        let a = FFElement::from_coords(&f81, vec![1, 2, 0, 1]).unwrap();
        assert_eq!(a.to_string(), "1,2;0,1");
        assert_eq!(parse_element(&f81, "1,2;0,1").unwrap(), a);
        let f7 = make_field(7, 1, 0).unwrap();
        assert_eq!(parse_element(&f7, "4").unwrap(), FFElement::from_int(&f7, 4));
        assert!(parse_element(&f7, "9").is_err());
        assert!(parse_element(&f81, "1,2;0").is_err());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(parse_field_spec("p=2,m=3").unwrap(), (2, 3, None));
        assert_eq!(
            parse_field_spec("p=17, m=1, seed=9").unwrap(),
            (17, 1, Some(9))
        );
        assert!(parse_field_spec("p=2").is_err());
        assert!(parse_field_spec("p=2,m=x").is_err());
        assert!(parse_field_spec("q=4,m=1").is_err());
    }

    #[test]
    fn trace_lands_in_subfield() {
        let f2 = make_field(2, 1, 0).unwrap();
        let f64 = extend(&f2, 6, 3).unwrap();
        for i in 0..64u128 {
            let a = FFElement::from_index(&f64, i).unwrap();
            let t = rel_trace(&a, 2).unwrap();
            assert!(subfield_member(&t, 2).unwrap());
            let t1 = rel_trace(&a, 1).unwrap();
            assert!(subfield_member(&t1, 1).unwrap());
            // Transitivity through the middle level.
            assert_eq!(rel_trace(&t, 1).unwrap(), t1);
        }
        assert!(rel_trace(&FFElement::one(&f64), 4).is_err());
    }

    #[test]
    fn coerce_and_embed_are_inverse() {
        let f3 = make_field(3, 1, 0).unwrap();
        let f27 = extend(&f3, 3, 0).unwrap();
        for v in 0..3u64 {
            let a = FFElement::from_int(&f3, v);
            let up = embed(&a, &f27).unwrap();
            assert_eq!(coerce_down(&up, &f3).unwrap(), a);
        }
        let t = FFElement::from_coords(&f27, vec![0, 1, 0]).unwrap();
        assert!(matches!(coerce_down(&t, &f3), Err(Error::NotInSubfield)));
        let f5 = make_field(5, 1, 0).unwrap();
        assert!(matches!(coerce_down(&t, &f5), Err(Error::CtxMismatch)));
    }
}
