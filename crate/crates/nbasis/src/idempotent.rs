//! Orthogonal idempotents of F_q[x]/(x^n - 1) for gcd(q, n) = 1.
//!
//! The period matrix pairs cyclotomic classes against each other
//! through a primitive n-th root of unity: entry (i, j) sums zeta
//! raised to a * b over a in class i, with b the representative of
//! class j. Inverting that matrix against the class transcription
//! polynomials yields one idempotent per class, and a verification
//! pass re-derives every defining identity from scratch.

use std::sync::Arc;

use crate::cyclotomy::{
    epsilon_poly, orbit_min_poly, primitive_nth_root, q_classes, ClassPartition,
};
use crate::error::Result;
use crate::field::{coerce_down, FFElement, FieldCtx};
use crate::matrix::MatrixFq;
use crate::poly::Poly;

/// Matrix of period sums over F_q: rows and columns are indexed by the
/// cyclotomic classes, entry (i, j) is the sum of zeta^(a * b_j) over
/// a in class i, where b_j is the representative of class j. Every
/// entry is fixed by Frobenius and therefore coerces into F_q.
pub fn gauss_period_matrix(
    part: &ClassPartition,
    zeta: &FFElement,
    base: &Arc<FieldCtx>,
) -> Result<MatrixFq> {
    let ext = zeta.ctx();
    let n = part.n;
    let r = part.len();
    // Power table zeta^0 .. zeta^(n-1); exponents are used mod n.
    let mut powers = Vec::with_capacity(n as usize);
    let mut acc = FFElement::one(ext);
    for _ in 0..n {
        powers.push(acc.clone());
        acc = acc.mul(zeta);
    }
    let mut entries = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            let b = part.classes[j].representative as u128;
            let mut sum = FFElement::zero(ext);
            for &a in &part.classes[i].members {
                let e = (a as u128 * b % n as u128) as usize;
                sum = sum.add(&powers[e]);
            }
            entries.push(coerce_down(&sum, base)?);
        }
    }
    let mut it = entries.into_iter();
    Ok(MatrixFq::from_fn(base, r, |_, _| it.next().unwrap()))
}

/// The idempotents of F_q[x]/(x^n - 1) together with everything used
/// to build them.
pub struct IdempotentSet {
    pub partition: ClassPartition,
    pub matrix: MatrixFq,
    pub matrix_inv: MatrixFq,
    /// One idempotent per class, as polynomials over F_q of degree
    /// below n, in class order.
    pub idempotents: Vec<Poly>,
    /// The root of unity used to separate the classes, in its field.
    pub zeta: FFElement,
    pub zeta_field: Arc<FieldCtx>,
    pub base: Arc<FieldCtx>,
}

/// Build the idempotent set for F_q[x]/(x^n - 1). The seed controls
/// the choice of the root of unity and of the splitting field modulus;
/// the set of idempotents does not depend on it, although a different
/// root may pair them with the classes in a different order.
pub fn idempotents(n: u64, base: &Arc<FieldCtx>, seed: u64) -> Result<IdempotentSet> {
    let part = q_classes(n, base.cardinality())?;
    let (zeta_field, zeta) = primitive_nth_root(n, base, seed)?;
    let matrix = gauss_period_matrix(&part, &zeta, base)?;
    let matrix_inv = matrix.inverse()?;
    let r = part.len();
    let eps: Vec<Poly> = (0..r)
        .map(|j| epsilon_poly(&part, j, base))
        .collect::<Result<_>>()?;
    let idempotents = (0..r)
        .map(|i| {
            let mut e = Poly::zero(base);
            for (j, eps_j) in eps.iter().enumerate() {
                e = e.add(&eps_j.mul_scalar(matrix_inv.get(i, j)));
            }
            e
        })
        .collect();
    Ok(IdempotentSet {
        partition: part,
        matrix,
        matrix_inv,
        idempotents,
        zeta,
        zeta_field,
        base: base.clone(),
    })
}

/// Outcome of the independent identity checks on an idempotent set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentChecks {
    /// matrix * matrix_inv is the identity.
    pub matrix_inverse: bool,
    /// The idempotents sum to 1.
    pub sum_is_one: bool,
    /// e_i * e_j = delta_ij * e_i mod x^n - 1.
    pub orthogonal_idempotent: bool,
    /// e_i mod f_j = delta_ij for the irreducible factors f_j of
    /// x^n - 1 attached to the classes.
    pub factor_residues: bool,
    /// e_i(zeta^(b_j)) = delta_ij at the class representatives.
    pub root_evaluations: bool,
}

impl IdempotentChecks {
    pub fn all_pass(&self) -> bool {
        self.matrix_inverse
            && self.sum_is_one
            && self.orthogonal_idempotent
            && self.factor_residues
            && self.root_evaluations
    }
}

/// Re-derive every defining property of the set. Each check is
/// computed independently of how the set was constructed.
pub fn verify_idempotents(set: &IdempotentSet) -> Result<IdempotentChecks> {
    let n = set.partition.n as usize;
    let r = set.partition.len();
    let base = &set.base;

    let matrix_inverse = set.matrix.mul(&set.matrix_inv).is_identity()
        && set.matrix_inv.mul(&set.matrix).is_identity();

    let mut sum = Poly::zero(base);
    for e in &set.idempotents {
        sum = sum.add(e);
    }
    let sum_is_one = sum == Poly::one(base);

    let mut orthogonal_idempotent = true;
    for i in 0..r {
        for j in 0..r {
            let prod = set.idempotents[i]
                .mul(&set.idempotents[j])
                .mod_xn_minus_1(n);
            let expect = if i == j {
                set.idempotents[i].clone()
            } else {
                Poly::zero(base)
            };
            if prod != expect {
                orthogonal_idempotent = false;
            }
        }
    }

    let mut factor_residues = true;
    for j in 0..r {
        let f_j = orbit_min_poly(&set.partition, j, &set.zeta)?;
        for i in 0..r {
            let residue = set.idempotents[i].rem(&f_j)?;
            let expect = if i == j {
                Poly::one(base)
            } else {
                Poly::zero(base)
            };
            if residue != expect {
                factor_residues = false;
            }
        }
    }

    let mut root_evaluations = true;
    let one = FFElement::one(&set.zeta_field);
    let zero = FFElement::zero(&set.zeta_field);
    for j in 0..r {
        let b = set.partition.classes[j].representative;
        let at = set.zeta.pow(b as u128);
        for i in 0..r {
            let value = eval_lifted(&set.idempotents[i], &at, &set.zeta_field)?;
            let expect = if i == j { &one } else { &zero };
            if value != *expect {
                root_evaluations = false;
            }
        }
    }

    Ok(IdempotentChecks {
        matrix_inverse,
        sum_is_one,
        orthogonal_idempotent,
        factor_residues,
        root_evaluations,
    })
}

/// Evaluate a polynomial over F_q at a point of the splitting field,
/// which may be F_q itself when the root of unity already lives there.
fn eval_lifted(f: &Poly, at: &FFElement, field: &Arc<FieldCtx>) -> Result<FFElement> {
    if field.id() == f.ctx().id() {
        Ok(f.eval(at))
    } else {
        f.eval_ext(at)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::field::make_field;

    #[test]
    fn period_matrix_for_two_mod_three() {
        // Classes of 2 mod 3 are {0}, {1, 2}; the matrix over F_2 is
        // [[1, 1], [0, 1]] and is its own inverse.
        let f2 = make_field(2, 1, 0).unwrap();
        let set = idempotents(3, &f2, 0).unwrap();
        let m = &set.matrix;
        let vals: Vec<u64> = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).coords()[0])
            .collect();
        assert_eq!(vals, vec![1, 1, 0, 1]);
        assert!(m.mul(&set.matrix_inv).is_identity());
    }

    #[test]
    fn idempotents_for_two_mod_three() {
        let f2 = make_field(2, 1, 0).unwrap();
        let set = idempotents(3, &f2, 0).unwrap();
        assert_eq!(
            set.idempotents[0],
            Poly::from_int_coeffs(&f2, &[1, 1, 1])
        );
        assert_eq!(set.idempotents[1], Poly::from_int_coeffs(&f2, &[0, 1, 1]));
        assert!(verify_idempotents(&set).unwrap().all_pass());
    }

    #[test]
    fn prime_target_with_primitive_base() {
        // q = 3, n = 5: q generates the units mod 5, so there are two
        // classes and e_0 = (1/5) * (1 + x + x^2 + x^3 + x^4), with
        // 1/5 = 2 mod 3.
        let f3 = make_field(3, 1, 0).unwrap();
        let set = idempotents(5, &f3, 0).unwrap();
        assert_eq!(set.partition.len(), 2);
        assert_eq!(
            set.idempotents[0],
            Poly::from_int_coeffs(&f3, &[2, 2, 2, 2, 2])
        );
        assert!(verify_idempotents(&set).unwrap().all_pass());
    }

    #[test]
    fn three_mod_four_all_checks_pass() {
        let f3 = make_field(3, 1, 0).unwrap();
        let set = idempotents(4, &f3, 0).unwrap();
        let members: Vec<Vec<u64>> = set
            .partition
            .classes
            .iter()
            .map(|c| c.members.clone())
            .collect();
        assert_eq!(members, vec![vec![0], vec![1, 3], vec![2]]);
        assert!(verify_idempotents(&set).unwrap().all_pass());
    }

    #[test]
    fn verification_grid() {
        for (p, m, ns) in [
            (2u64, 1u64, vec![1u64, 3, 5, 7, 9, 11, 15]),
            (3, 1, vec![1, 2, 4, 5, 7, 8, 10, 11]),
            (5, 1, vec![1, 2, 3, 4, 6, 7, 8]),
            (2, 2, vec![3, 5, 7, 9]),
            (3, 2, vec![2, 4, 5, 7]),
        ] {
            let fq = make_field(p, m, 0).unwrap();
            for n in ns {
                let set = idempotents(n, &fq, 0).unwrap();
                let checks = verify_idempotents(&set).unwrap();
                assert!(
                    checks.all_pass(),
                    "identity checks failed for q={}, n={}: {:?}",
                    fq.cardinality(),
                    n,
                    checks
                );
            }
        }
    }

    #[test]
    fn broken_set_is_caught() {
        let f2 = make_field(2, 1, 0).unwrap();
        let mut set = idempotents(7, &f2, 0).unwrap();
        set.idempotents[1] = set.idempotents[1].add(&Poly::one(&f2));
        let checks = verify_idempotents(&set).unwrap();
        assert!(!checks.all_pass());
        assert!(!checks.sum_is_one);
    }

    #[test]
    fn seed_does_not_change_the_idempotent_set() {
        fn keys(set: &IdempotentSet) -> Vec<Vec<Vec<u64>>> {
            let mut ks: Vec<Vec<Vec<u64>>> = set
                .idempotents
                .iter()
                .map(|e| e.coeffs().iter().map(|c| c.coords().to_vec()).collect())
                .collect();
            ks.sort();
            ks
        }
        let f3 = make_field(3, 1, 0).unwrap();
        let a = idempotents(11, &f3, 1).unwrap();
        let b = idempotents(11, &f3, 99).unwrap();
        assert_eq!(keys(&a), keys(&b));
        // The class {0} always pairs with the same idempotent.
        assert_eq!(a.idempotents[0], b.idempotents[0]);

        let f2 = make_field(2, 1, 0).unwrap();
        let c = idempotents(15, &f2, 3).unwrap();
        let d = idempotents(15, &f2, 77).unwrap();
        assert_eq!(keys(&c), keys(&d));
    }

    #[test]
    fn shared_factor_is_rejected() {
        let f2 = make_field(2, 1, 0).unwrap();
        assert!(matches!(
            idempotents(6, &f2, 0),
            Err(Error::NotCoprime { .. })
        ));
    }
}
