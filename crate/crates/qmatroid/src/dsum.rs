//! Direct sums of q-matroids, and the matroid union underlying them.
//!
//! For q-matroids M1 on GF(q)^n1 and M2 on GF(q)^n2, the direct sum lives on
//! GF(q)^(n1+n2) and is the union of the two components extended by loops to
//! the whole space:
//!
//! ```text
//! rho(V) = dim V + min over X <= V ( rho1(pi1(X)) + rho2(pi2(X)) - dim X )
//! ```
//!
//! Two rank strategies are provided. The default reconstructs ranks from the
//! product of the component cyclic-flat families (ranks add across the
//! product), which is fast once the component families are known. The naive
//! strategy evaluates the union formula through an equivalent minimization
//! over split spaces X1 (+) X2 and serves as an independent reference.
//!
//! Unlike the classical case, circuits of a q-matroid direct sum need not be
//! embedded circuits of the components, and a block-diagonal generator
//! matrix does not represent the direct sum of the blocks; the check helpers
//! at the bottom audit the relations that do hold.

use crate::matroid::QMatroid;
use crate::subspace::{enumerate_subspaces, restrict_coords, DimFilter, Subspace};
use crate::zflats::{compute_zflats, CyclicFlatFamily};
use crate::{Budget, Error, Result};

/// How a direct sum answers rank queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SumStrategy {
    /// Reconstruct from the product of the component cyclic-flat families.
    #[default]
    ZBased,
    /// Minimize the union formula over split subspaces; reference
    /// implementation, exponential per query.
    Naive,
}

fn require_same_q(m1: &QMatroid, m2: &QMatroid) -> Result<u32> {
    if m1.q() != m2.q() {
        return Err(Error::GroundMismatch(format!(
            "cannot combine q-matroids over GF({}) and GF({})",
            m1.q(),
            m2.q()
        )));
    }
    Ok(m1.q())
}

/// Embeds a subspace of GF(q)^n1 into the first block of GF(q)^(n1+n2).
pub fn embed_first(v: &Subspace, n2: u32) -> Subspace {
    let n = v.n() + n2;
    let rows: Vec<Vec<u8>> = v
        .basis_rows()
        .into_iter()
        .map(|mut r| {
            r.resize(n as usize, 0);
            r
        })
        .collect();
    Subspace::span(v.q(), n, &rows).expect("padded rows are valid")
}

/// Embeds a subspace of GF(q)^n2 into the second block of GF(q)^(n1+n2).
pub fn embed_second(v: &Subspace, n1: u32) -> Subspace {
    let n = n1 + v.n();
    let rows: Vec<Vec<u8>> = v
        .basis_rows()
        .into_iter()
        .map(|r| {
            let mut row = vec![0u8; n1 as usize];
            row.extend(r);
            row
        })
        .collect();
    Subspace::span(v.q(), n, &rows).expect("padded rows are valid")
}

/// X1 (+) X2 inside GF(q)^(n1+n2).
pub fn embed_pair(x1: &Subspace, x2: &Subspace) -> Result<Subspace> {
    if x1.q() != x2.q() {
        return Err(Error::GroundMismatch("blocks over different fields".into()));
    }
    embed_first(x1, x2.n()).sum(&embed_second(x2, x1.n()))
}

/// Projection of V <= GF(q)^(n1+n2) onto the first n1 coordinates.
pub fn project_first(v: &Subspace, n1: u32) -> Subspace {
    let rows: Vec<Vec<u8>> = v.basis_rows().into_iter().map(|r| r[..n1 as usize].to_vec()).collect();
    Subspace::span(v.q(), n1, &rows).expect("projected rows are valid")
}

/// Projection of V <= GF(q)^(n1+n2) onto the last n - n1 coordinates.
pub fn project_second(v: &Subspace, n1: u32) -> Subspace {
    let n2 = v.n() - n1;
    let rows: Vec<Vec<u8>> = v.basis_rows().into_iter().map(|r| r[n1 as usize..].to_vec()).collect();
    Subspace::span(v.q(), n2, &rows).expect("projected rows are valid")
}

/// The direct sum M1 (+) M2 on GF(q)^(n1+n2).
pub fn direct_sum(
    m1: &QMatroid,
    m2: &QMatroid,
    strategy: SumStrategy,
    budget: &Budget,
) -> Result<QMatroid> {
    let q = require_same_q(m1, m2)?;
    let (n1, n2) = (m1.n(), m2.n());
    match strategy {
        SumStrategy::ZBased => {
            let f1 = compute_zflats(m1, budget)?;
            let f2 = compute_zflats(m2, budget)?;
            let members = product_family_members(&f1, &f2)?;
            let inner = QMatroid::from_cyclic_flats(q, n1 + n2, &members)?;
            // The wrapper caches; don't double-cache inside.
            inner.set_cache_enabled(false);
            Ok(QMatroid::from_rank_fn(q, n1 + n2, "dsum-zbased", move |v| inner.rank_u(v)))
        }
        SumStrategy::Naive => {
            let m1 = m1.clone();
            let m2 = m2.clone();
            let f = move |v: &Subspace| -> u32 {
                let p1 = project_first(v, n1);
                let p2 = project_second(v, n1);
                let rm1 = restrict_coords(&p1);
                let rm2 = restrict_coords(&p2);
                let sub1 = enumerate_subspaces(q, p1.dim(), DimFilter::All).expect("small space");
                let sub2 = enumerate_subspaces(q, p2.dim(), DimFilter::All).expect("small space");
                // The minimum over X <= V of rho1(pi1 X) + rho2(pi2 X) - dim X
                // is attained with X = (X1 (+) X2) /\ V for X1 <= pi1(V),
                // X2 <= pi2(V): enlarging X inside a fixed product only
                // lowers the objective.
                let mut best: i64 = 0; // X = 0
                for c1 in sub1.iter() {
                    let x1 = rm1.from_sub(&c1);
                    let r1 = m1.rank_u(&x1) as i64;
                    let e1 = embed_first(&x1, n2);
                    for c2 in sub2.iter() {
                        let x2 = rm2.from_sub(&c2);
                        let r2 = m2.rank_u(&x2) as i64;
                        let x = e1.sum(&embed_second(&x2, n1)).expect("same ambient");
                        let overlap = x.intersect(v).expect("same ambient").dim() as i64;
                        best = best.min(r1 + r2 - overlap);
                    }
                }
                (v.dim() as i64 + best) as u32
            };
            Ok(QMatroid::from_rank_fn(q, n1 + n2, "dsum-naive", f))
        }
    }
}

/// The union M1 v M2 of two q-matroids on the same ground space:
/// rho(V) = dim V + min over X <= V (rho1(X) + rho2(X) - dim X).
/// Reference implementation, exponential per query.
pub fn union(m1: &QMatroid, m2: &QMatroid) -> Result<QMatroid> {
    let q = require_same_q(m1, m2)?;
    if m1.n() != m2.n() {
        return Err(Error::GroundMismatch(format!(
            "union needs one ground space, got dimensions {} and {}",
            m1.n(),
            m2.n()
        )));
    }
    let n = m1.n();
    let m1 = m1.clone();
    let m2 = m2.clone();
    let f = move |v: &Subspace| -> u32 {
        let rm = restrict_coords(v);
        let subs = enumerate_subspaces(q, v.dim(), DimFilter::All).expect("small space");
        let mut best: i64 = 0;
        for c in subs.iter() {
            let x = rm.from_sub(&c);
            best = best.min(m1.rank_u(&x) as i64 + m2.rank_u(&x) as i64 - x.dim() as i64);
        }
        (v.dim() as i64 + best) as u32
    };
    Ok(QMatroid::from_rank_fn(q, n, "union", f))
}

fn product_family_members(
    f1: &CyclicFlatFamily,
    f2: &CyclicFlatFamily,
) -> Result<Vec<(Subspace, u32)>> {
    let mut members = Vec::with_capacity(f1.len() * f2.len());
    for (z1, r1) in f1.members() {
        for (z2, r2) in f2.members() {
            members.push((embed_pair(z1, z2)?, r1 + r2));
        }
    }
    Ok(members)
}

/// The cyclic-flat family of M1 (+) M2, built directly as the product of the
/// component families: members Z1 (+) Z2 with rank rho1(Z1) + rho2(Z2).
pub fn zflats_of_sum(
    f1: &CyclicFlatFamily,
    f2: &CyclicFlatFamily,
) -> Result<CyclicFlatFamily> {
    if f1.q() != f2.q() {
        return Err(Error::GroundMismatch("families over different fields".into()));
    }
    let members = product_family_members(f1, f2)?;
    CyclicFlatFamily::from_members(f1.q(), f1.n() + f2.n(), &members)
}

/// Verifies that the circuits of M1 (+) M2 are exactly the minimal spaces X
/// with rho1(pi1 X) + rho2(pi2 X) < dim X, by exhausting the sum's lattice.
pub fn check_circuits_of_sum(m1: &QMatroid, m2: &QMatroid, budget: &Budget) -> Result<bool> {
    let q = require_same_q(m1, m2)?;
    let (n1, n2) = (m1.n(), m2.n());
    let sum = direct_sum(m1, m2, SumStrategy::ZBased, budget)?;
    let deficient = |x: &Subspace| -> bool {
        let r1 = m1.rank_u(&project_first(x, n1));
        let r2 = m2.rank_u(&project_second(x, n1));
        r1 + r2 < x.dim()
    };
    let stream = enumerate_subspaces(q, n1 + n2, DimFilter::All)?;
    let mut seen = 0u64;
    for x in stream.iter() {
        seen += 1;
        if seen % 256 == 0 {
            budget.check(|| format!("circuit comparison, {seen} of {}", stream.total()))?;
        }
        let minimal_deficient =
            deficient(&x) && x.for_each_hyperplane(|_, w| !deficient(w));
        if sum.is_circuit(&x)? != minimal_deficient {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verifies (M1 (+) M2)* = M1* (+) M2* rank-for-rank over the whole lattice.
pub fn check_dual_of_sum(m1: &QMatroid, m2: &QMatroid, budget: &Budget) -> Result<bool> {
    let q = require_same_q(m1, m2)?;
    let dual_of_sum = direct_sum(m1, m2, SumStrategy::ZBased, budget)?.dual();
    let sum_of_duals = direct_sum(&m1.dual(), &m2.dual(), SumStrategy::ZBased, budget)?;
    ranks_agree(q, m1.n() + m2.n(), &dual_of_sum, &sum_of_duals, budget)
}

/// Verifies ((M1 (+) M2) (+) M3) = (M1 (+) (M2 (+) M3)) rank-for-rank.
pub fn check_associative(
    m1: &QMatroid,
    m2: &QMatroid,
    m3: &QMatroid,
    budget: &Budget,
) -> Result<bool> {
    let q = require_same_q(m1, m2)?;
    require_same_q(m2, m3)?;
    let left = direct_sum(
        &direct_sum(m1, m2, SumStrategy::ZBased, budget)?,
        m3,
        SumStrategy::ZBased,
        budget,
    )?;
    let right = direct_sum(
        m1,
        &direct_sum(m2, m3, SumStrategy::ZBased, budget)?,
        SumStrategy::ZBased,
        budget,
    )?;
    ranks_agree(q, m1.n() + m2.n() + m3.n(), &left, &right, budget)
}

/// Verifies the relations between a direct sum and the q-matroid of the
/// block-diagonal generator matrix on the same ground space (the two are
/// different in general): every cyclic flat of the sum is one of the block
/// matroid, and every independent space of the block matroid is independent
/// in the sum.
pub fn check_block_diag(
    sum: &QMatroid,
    block: &QMatroid,
    budget: &Budget,
) -> Result<bool> {
    if sum.q() != block.q() || sum.n() != block.n() {
        return Err(Error::GroundMismatch("comparands live on different ground spaces".into()));
    }
    let zs = compute_zflats(sum, budget)?;
    for (z, _) in zs.members() {
        if !(block.is_flat(z)? && block.is_cyclic(z)?) {
            return Ok(false);
        }
    }
    let stream = enumerate_subspaces(sum.q(), sum.n(), DimFilter::All)?;
    let mut seen = 0u64;
    for v in stream.iter() {
        seen += 1;
        if seen % 256 == 0 {
            budget.check(|| format!("independence comparison, {seen} of {}", stream.total()))?;
        }
        if block.is_independent(&v)? && !sum.is_independent(&v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ranks_agree(
    q: u32,
    n: u32,
    a: &QMatroid,
    b: &QMatroid,
    budget: &Budget,
) -> Result<bool> {
    let stream = enumerate_subspaces(q, n, DimFilter::All)?;
    let mut seen = 0u64;
    for v in stream.iter() {
        seen += 1;
        if seen % 256 == 0 {
            budget.check(|| format!("rank comparison, {seen} of {}", stream.total()))?;
        }
        if a.rank_u(&v) != b.rank_u(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(q: u32, n: u32, rows: &[&[u8]]) -> Subspace {
        Subspace::span(q, n, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn u12() -> QMatroid {
        QMatroid::uniform(2, 2, 1).unwrap()
    }

    #[test]
    fn embeddings_and_projections() {
        let v = sp(2, 2, &[&[1, 1]]);
        let left = embed_first(&v, 3);
        assert_eq!(left.basis_rows(), vec![vec![1, 1, 0, 0, 0]]);
        let right = embed_second(&v, 3);
        assert_eq!(right.basis_rows(), vec![vec![0, 0, 0, 1, 1]]);
        let pair = embed_pair(&v, &v).unwrap();
        assert_eq!(pair.dim(), 2);
        assert_eq!(project_first(&pair, 2), v);
        assert_eq!(project_second(&pair, 2), v);
        // Projections of a diagonal space are full even though the space
        // itself misses both blocks.
        let diag = sp(2, 4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        assert_eq!(project_first(&diag, 2), Subspace::full(2, 2));
        assert_eq!(project_second(&diag, 2), Subspace::full(2, 2));
    }

    #[test]
    fn sum_ranks_are_additive_on_split_spaces() {
        let budget = Budget::unlimited();
        let m = direct_sum(&u12(), &u12(), SumStrategy::ZBased, &budget).unwrap();
        assert_eq!(m.rank_full(), 2);
        for x1 in enumerate_subspaces(2, 2, DimFilter::All).unwrap().iter() {
            for x2 in enumerate_subspaces(2, 2, DimFilter::All).unwrap().iter() {
                let x = embed_pair(&x1, &x2).unwrap();
                let expect = u12().rank(&x1).unwrap() + u12().rank(&x2).unwrap();
                assert_eq!(m.rank(&x).unwrap(), expect, "at {x1:?} (+) {x2:?}");
            }
        }
    }

    #[test]
    fn naive_and_zbased_strategies_agree() {
        let budget = Budget::unlimited();
        let a = direct_sum(&u12(), &u12(), SumStrategy::ZBased, &budget).unwrap();
        let b = direct_sum(&u12(), &u12(), SumStrategy::Naive, &budget).unwrap();
        assert!(ranks_agree(2, 4, &a, &b, &budget).unwrap());
        // A non-uniform component over GF(3).
        let m1 = QMatroid::uniform(3, 2, 1).unwrap();
        let m2 = QMatroid::uniform(3, 1, 1).unwrap();
        let a = direct_sum(&m1, &m2, SumStrategy::ZBased, &budget).unwrap();
        let b = direct_sum(&m1, &m2, SumStrategy::Naive, &budget).unwrap();
        assert!(ranks_agree(3, 3, &a, &b, &budget).unwrap());
    }

    #[test]
    fn circuits_of_sum_include_unsplit_spaces() {
        let budget = Budget::unlimited();
        let m = direct_sum(&u12(), &u12(), SumStrategy::ZBased, &budget).unwrap();
        let e1 = sp(2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let e2 = sp(2, 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(m.is_circuit(&e1).unwrap());
        assert!(m.is_circuit(&e2).unwrap());
        // The diagonal plane is independent...
        let diag = sp(2, 4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        assert!(m.is_independent(&diag).unwrap());
        // ...but a 3-space avoiding both blocks is a circuit, which cannot
        // happen in a classical direct sum.
        let x = sp(2, 4, &[&[1, 0, 0, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]]);
        assert!(!x.contains(&e1) && !x.contains(&e2));
        assert!(m.is_circuit(&x).unwrap());
        // Total circuit count for U_{1,2} (+) U_{1,2}: the two blocks plus
        // the nine 3-spaces containing neither block.
        let mut circuits = 0;
        for v in enumerate_subspaces(2, 4, DimFilter::All).unwrap().iter() {
            if m.is_circuit(&v).unwrap() {
                circuits += 1;
            }
        }
        assert_eq!(circuits, 11);
        assert!(check_circuits_of_sum(&u12(), &u12(), &budget).unwrap());
    }

    #[test]
    fn union_of_rank_one_uniforms_is_rank_two() {
        let budget = Budget::unlimited();
        let u = union(&u12(), &u12()).unwrap();
        let expect = QMatroid::uniform(2, 2, 2).unwrap();
        assert!(ranks_agree(2, 2, &u, &expect, &budget).unwrap());
        let mismatch = union(&u12(), &QMatroid::uniform(2, 3, 1).unwrap());
        assert!(matches!(mismatch, Err(Error::GroundMismatch(_))));
        let wrong_q = union(&u12(), &QMatroid::uniform(3, 2, 1).unwrap());
        assert!(matches!(wrong_q, Err(Error::GroundMismatch(_))));
    }

    #[test]
    fn product_family_is_the_sum_family() {
        let budget = Budget::unlimited();
        let f1 = compute_zflats(&u12(), &budget).unwrap();
        let product = zflats_of_sum(&f1, &f1).unwrap();
        assert_eq!(product.profile(), vec![(0, 0, 1), (2, 1, 2), (4, 2, 1)]);
        assert_eq!(product.covers(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        // Same family as a fresh scan of the sum oracle.
        let sum = direct_sum(&u12(), &u12(), SumStrategy::ZBased, &budget).unwrap();
        let scanned = compute_zflats(&sum, &budget).unwrap();
        assert_eq!(product.members(), scanned.members());
    }

    #[test]
    fn duality_distributes_over_sums() {
        let budget = Budget::unlimited();
        assert!(check_dual_of_sum(&u12(), &u12(), &budget).unwrap());
        let m1 = QMatroid::uniform(2, 3, 2).unwrap();
        assert!(check_dual_of_sum(&m1, &u12(), &budget).unwrap());
    }

    #[test]
    fn sums_are_associative() {
        let budget = Budget::unlimited();
        let u11 = QMatroid::uniform(2, 1, 1).unwrap();
        assert!(check_associative(&u12(), &u11, &u12(), &budget).unwrap());
    }

    #[test]
    fn contracting_one_block_recovers_the_other() {
        let budget = Budget::unlimited();
        let m1 = QMatroid::uniform(2, 2, 1).unwrap();
        let f8 = crate::field::create_field(2, 3, None).unwrap();
        let w = f8.gen_w();
        let w3 = f8.pow(w, 3);
        let m2 =
            QMatroid::from_representation(&f8, 3, &[vec![1, 0, w3], vec![0, 1, w]]).unwrap();
        let sum = direct_sum(&m1, &m2, SumStrategy::ZBased, &budget).unwrap();
        let e1 = embed_first(&Subspace::full(2, 2), 3);
        let contracted = sum.contraction(&e1).unwrap();
        assert_eq!(contracted.n(), 3);
        assert!(ranks_agree(2, 3, &contracted, &m2, &budget).unwrap());
        // Restricting to a block recovers that block's matroid as well.
        let restricted = sum.restriction(&e1).unwrap();
        assert!(ranks_agree(2, 2, &restricted, &m1, &budget).unwrap());
    }

    #[test]
    fn block_diagonal_matrices_do_not_give_sums() {
        let budget = Budget::unlimited();
        let f4 = crate::field::create_field(2, 2, None).unwrap();
        let w = f4.gen_w();
        let m1 = QMatroid::from_representation(&f4, 2, &[vec![1, w]]).unwrap();
        let sum = direct_sum(&m1, &m1, SumStrategy::ZBased, &budget).unwrap();
        let block =
            QMatroid::from_representation(&f4, 4, &[vec![1, w, 0, 0], vec![0, 0, 1, w]]).unwrap();
        // The diagonal plane separates the two.
        let diag = sp(2, 4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        assert_eq!(sum.rank(&diag).unwrap(), 2);
        assert_eq!(block.rank(&diag).unwrap(), 1);
        // But the documented inclusions hold.
        assert!(check_block_diag(&sum, &block, &budget).unwrap());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let budget = Budget::unlimited();
        let a = QMatroid::uniform(2, 2, 1).unwrap();
        let b = QMatroid::uniform(3, 2, 1).unwrap();
        assert!(matches!(
            direct_sum(&a, &b, SumStrategy::ZBased, &budget),
            Err(Error::GroundMismatch(_))
        ));
        let v2 = Subspace::zero(2, 2);
        let v3 = Subspace::zero(3, 2);
        assert!(matches!(embed_pair(&v2, &v3), Err(Error::GroundMismatch(_))));
    }
}
