//! The lattice of cyclic flats.
//!
//! A subspace is a *cyclic flat* when it is simultaneously a flat (no line
//! extends it without raising the rank) and cyclic (every hyperplane keeps
//! full rank). The cyclic flats with their ranks determine the whole rank
//! function:
//!
//! ```text
//! rho(V) = min over cyclic flats Z of ( rho(Z) + dim(V + Z) - dim Z )
//! ```
//!
//! and independence can be read off the family as well. This module extracts
//! the family from any rank oracle, exposes the lattice operations (meet =
//! cyclic core of the intersection, join = closure of the sum), restricts
//! families to members, validates hand-written families, and renders Hasse
//! diagrams.

use crate::matroid::{CheckMode, QMatroid};
use crate::subspace::{enumerate_subspaces, restrict_coords, DimFilter, Subspace};
use crate::{Budget, Error, Result};

/// The cyclic flats of a q-matroid, each with its rank, sorted in the
/// deterministic subspace order (dimension, then pivot pattern, then
/// entries).
#[derive(Clone, Debug)]
pub struct CyclicFlatFamily {
    q: u32,
    n: u32,
    members: Vec<(Subspace, u32)>,
    /// Transitive reduction of the inclusion order: (lower, upper) index
    /// pairs, sorted.
    covers: Vec<(usize, usize)>,
    /// Present when the family was computed from (or restricted through) a
    /// rank oracle; required for meet/join.
    oracle: Option<QMatroid>,
}

/// Scans the whole subspace lattice of the ground space and collects the
/// cyclic flats of `m`.
pub fn compute_zflats(m: &QMatroid, budget: &Budget) -> Result<CyclicFlatFamily> {
    let stream = enumerate_subspaces(m.q(), m.n(), DimFilter::All)?;
    let mut members: Vec<(Subspace, u32)> = Vec::new();
    let mut seen: u64 = 0;
    for v in stream.iter() {
        seen += 1;
        if seen % 1024 == 0 {
            budget.check(|| {
                format!("cyclic-flat scan, {seen} of {} subspaces", stream.total())
            })?;
        }
        let d = v.dim();
        let r = m.rank_u(&v);
        // A nonzero independent space is never cyclic: each hyperplane
        // already drops the rank.
        if d > 0 && r == d {
            continue;
        }
        // Flat test first: it usually fails fast on a rank-preserving line.
        if !v.for_each_line_outside(|x| m.rank_u(&v.plus_line(x)) != r) {
            continue;
        }
        if d > 0 && !v.for_each_hyperplane(|_, w| m.rank_u(w) == r) {
            continue;
        }
        members.push((v, r));
    }
    // The enumerator already yields subspaces in sorted order.
    let covers = cover_edges(&members);
    Ok(CyclicFlatFamily {
        q: m.q(),
        n: m.n(),
        members,
        covers,
        oracle: Some(m.clone()),
    })
}

fn cover_edges(members: &[(Subspace, u32)]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (j, (zj, _)) in members.iter().enumerate() {
        for (i, (zi, _)) in members.iter().enumerate() {
            if i == j || !zj.contains(zi) || zj.dim() == zi.dim() {
                continue;
            }
            let direct = !members.iter().enumerate().any(|(k, (zk, _))| {
                k != i
                    && k != j
                    && zk.dim() > zi.dim()
                    && zk.dim() < zj.dim()
                    && zj.contains(zk)
                    && zk.contains(zi)
            });
            if direct {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    edges
}

impl CyclicFlatFamily {
    /// Builds a family from explicit members, without an oracle attached.
    /// Performs the same structural validation as the family-defined rank
    /// oracle.
    pub fn from_members(q: u32, n: u32, members: &[(Subspace, u32)]) -> Result<CyclicFlatFamily> {
        // Delegate validation; the constructor sorts internally, so re-sort
        // here the same way.
        QMatroid::from_cyclic_flats(q, n, members)?;
        let mut members = members.to_vec();
        members.sort_by(|a, b| a.0.cmp(&b.0));
        let covers = cover_edges(&members);
        Ok(CyclicFlatFamily { q, n, members, covers, oracle: None })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members with their ranks, sorted.
    pub fn members(&self) -> &[(Subspace, u32)] {
        &self.members
    }

    /// Cover relations of the inclusion lattice as (lower, upper) index
    /// pairs into `members()`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// The least member 0_Z = cl(0).
    pub fn least(&self) -> &(Subspace, u32) {
        &self.members[0]
    }

    /// The greatest member 1_Z = cyc(E).
    pub fn greatest(&self) -> &(Subspace, u32) {
        &self.members[self.members.len() - 1]
    }

    pub fn contains_member(&self, z: &Subspace) -> bool {
        self.members.binary_search_by(|(m, _)| m.cmp(z)).is_ok()
    }

    /// Rank of a member.
    pub fn member_rank(&self, z: &Subspace) -> Result<u32> {
        match self.members.binary_search_by(|(m, _)| m.cmp(z)) {
            Ok(i) => Ok(self.members[i].1),
            Err(_) => Err(Error::NotAMember),
        }
    }

    /// Multiset of (dimension, rank) profiles: sorted (dim, rank, count)
    /// triples. Equivalent q-matroids have equal profiles, so this is a
    /// cheap invariant to compare first.
    pub fn profile(&self) -> Vec<(u32, u32, usize)> {
        let mut out: Vec<(u32, u32, usize)> = Vec::new();
        for (z, r) in &self.members {
            let key = (z.dim(), *r);
            match out.iter_mut().find(|(d, rr, _)| (*d, *rr) == key) {
                Some((_, _, c)) => *c += 1,
                None => out.push((key.0, key.1, 1)),
            }
        }
        out.sort_unstable();
        out
    }

    fn check_space(&self, v: &Subspace) -> Result<()> {
        if v.q() != self.q || v.n() != self.n {
            return Err(Error::GroundMismatch(format!(
                "subspace of GF({})^{} queried against a family on GF({})^{}",
                v.q(),
                v.n(),
                self.q,
                self.n
            )));
        }
        Ok(())
    }

    /// Rank of an arbitrary subspace reconstructed from the family alone.
    pub fn rank_of(&self, v: &Subspace) -> Result<u32> {
        self.check_space(v)?;
        let mut best = u32::MAX;
        for (z, r) in &self.members {
            let sum = v.sum(z)?;
            best = best.min(r + sum.dim() - z.dim());
        }
        Ok(best)
    }

    /// Independence read off the family: V is independent iff
    /// dim(V /\ Z) <= rho(Z) for every member Z.
    pub fn independent(&self, v: &Subspace) -> Result<bool> {
        self.check_space(v)?;
        for (z, r) in &self.members {
            if v.intersect(z)?.dim() > *r {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lattice meet of two members: cyc(Z1 /\ Z2). Requires the oracle the
    /// family was computed from.
    pub fn meet(&self, z1: &Subspace, z2: &Subspace) -> Result<Subspace> {
        let m = self.require_oracle()?;
        self.require_member(z1)?;
        self.require_member(z2)?;
        m.cyclic_core(&z1.intersect(z2)?)
    }

    /// Lattice join of two members: cl(Z1 + Z2). Requires the oracle the
    /// family was computed from.
    pub fn join(&self, z1: &Subspace, z2: &Subspace) -> Result<Subspace> {
        let m = self.require_oracle()?;
        self.require_member(z1)?;
        self.require_member(z2)?;
        m.closure(&z1.sum(z2)?)
    }

    fn require_oracle(&self) -> Result<&QMatroid> {
        self.oracle.as_ref().ok_or(Error::NotComputedFromOracle)
    }

    fn require_member(&self, z: &Subspace) -> Result<()> {
        if self.contains_member(z) {
            Ok(())
        } else {
            Err(Error::NotAMember)
        }
    }

    pub fn oracle(&self) -> Option<&QMatroid> {
        self.oracle.as_ref()
    }

    /// The family of the restriction M|_X for a member X: exactly the
    /// members contained in X, re-coordinatized to GF(q)^dim(X) through X's
    /// canonical basis. The attached oracle (if any) is restricted
    /// alongside.
    pub fn restrict_to(&self, x: &Subspace) -> Result<CyclicFlatFamily> {
        self.check_space(x)?;
        self.require_member(x)?;
        let map = restrict_coords(x);
        let mut members: Vec<(Subspace, u32)> = Vec::new();
        for (z, r) in &self.members {
            if x.contains(z) {
                members.push((map.to_sub(z).expect("member inside x"), *r));
            }
        }
        members.sort_by(|a, b| a.0.cmp(&b.0));
        let covers = cover_edges(&members);
        let oracle = match &self.oracle {
            Some(m) => Some(m.restriction(x)?),
            None => None,
        };
        Ok(CyclicFlatFamily { q: self.q, n: x.dim(), members, covers, oracle })
    }

    /// Rebuilds a rank oracle defined by this family.
    pub fn to_matroid(&self) -> Result<QMatroid> {
        QMatroid::from_cyclic_flats(self.q, self.n, &self.members)
    }

    /// Renders the lattice as a GraphViz digraph, edges pointing from each
    /// member to its covers.
    pub fn export_hasse(&self) -> String {
        use std::fmt::Write;
        let mut out = String::from("digraph cyclic_flats {\n  rankdir=BT;\n");
        for (i, (z, r)) in self.members.iter().enumerate() {
            let _ = writeln!(out, "  z{i} [label=\"{:?} dim {} rank {}\"];", z, z.dim(), r);
        }
        for (lo, hi) in &self.covers {
            let _ = writeln!(out, "  z{lo} -> z{hi};");
        }
        out.push_str("}\n");
        out
    }
}

/// How thoroughly [`validate_family`] audits a hand-written family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationLevel {
    /// Distinctness, unique least member of rank 0, unique greatest member,
    /// strict rank growth on nested pairs.
    Structural,
    /// Structural checks, then exhaustively verify the induced oracle's
    /// rank axioms and that its computed cyclic flats reproduce the family.
    Full,
}

/// Validates that (members, ranks) is a legal cyclic-flat family on
/// GF(q)^n.
pub fn validate_family(
    q: u32,
    n: u32,
    members: &[(Subspace, u32)],
    level: ValidationLevel,
    budget: &Budget,
) -> Result<()> {
    let oracle = QMatroid::from_cyclic_flats(q, n, members)?;
    if level == ValidationLevel::Structural {
        return Ok(());
    }
    let report = oracle.axiom_check(CheckMode::Exhaustive, budget)?;
    if let Some(v) = report.violation {
        return Err(Error::InconsistentFamily(format!(
            "induced rank function violates the axioms: {v}"
        )));
    }
    let recovered = compute_zflats(&oracle, budget)?;
    let mut expect = members.to_vec();
    expect.sort_by(|a, b| a.0.cmp(&b.0));
    if recovered.members() != expect.as_slice() {
        return Err(Error::InconsistentFamily(format!(
            "family is not closed: the induced q-matroid has {} cyclic flats, {} were given",
            recovered.len(),
            expect.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(q: u32, n: u32, rows: &[&[u8]]) -> Subspace {
        Subspace::span(q, n, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn small_repr() -> QMatroid {
        let f8 = crate::field::create_field(2, 3, None).unwrap();
        let w = f8.gen_w();
        let w3 = f8.pow(w, 3);
        QMatroid::from_representation(&f8, 3, &[vec![1, 0, w3], vec![0, 1, w]]).unwrap()
    }

    fn full_spread() -> QMatroid {
        let members = vec![
            sp(2, 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]),
            sp(2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]),
            sp(2, 4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]),
            sp(2, 4, &[&[1, 0, 0, 1], &[0, 1, 1, 1]]),
            sp(2, 4, &[&[1, 0, 1, 1], &[0, 1, 1, 0]]),
        ];
        QMatroid::from_spread(2, 4, &members).unwrap()
    }

    #[test]
    fn uniform_families() {
        let budget = Budget::unlimited();
        let m = QMatroid::uniform(2, 4, 2).unwrap();
        let fam = compute_zflats(&m, &budget).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam.least(), &(Subspace::zero(2, 4), 0));
        assert_eq!(fam.greatest(), &(Subspace::full(2, 4), 2));
        assert_eq!(fam.covers(), &[(0, 1)]);

        let free = QMatroid::uniform(2, 3, 3).unwrap();
        let fam = compute_zflats(&free, &budget).unwrap();
        assert_eq!(fam.members(), &[(Subspace::zero(2, 3), 0)]);
        assert!(fam.covers().is_empty());

        let trivial = QMatroid::uniform(2, 3, 0).unwrap();
        let fam = compute_zflats(&trivial, &budget).unwrap();
        assert_eq!(fam.members(), &[(Subspace::full(2, 3), 0)]);
    }

    #[test]
    fn representable_family_and_reconstruction() {
        let budget = Budget::unlimited();
        let m = small_repr();
        let fam = compute_zflats(&m, &budget).unwrap();
        let z = sp(2, 3, &[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(fam.members(), &[(Subspace::zero(2, 3), 0), (z.clone(), 1)]);
        assert_eq!(fam.covers(), &[(0, 1)]);
        // Rank and independence reconstructed from the family agree with
        // the oracle everywhere.
        for v in enumerate_subspaces(2, 3, DimFilter::All).unwrap().iter() {
            assert_eq!(fam.rank_of(&v).unwrap(), m.rank(&v).unwrap());
            assert_eq!(fam.independent(&v).unwrap(), m.is_independent(&v).unwrap());
        }
        // Round trip through a family-defined oracle.
        let zm = fam.to_matroid().unwrap();
        for v in enumerate_subspaces(2, 3, DimFilter::All).unwrap().iter() {
            assert_eq!(zm.rank(&v).unwrap(), m.rank(&v).unwrap());
        }
        assert!(fam.contains_member(&z));
        assert_eq!(fam.member_rank(&z).unwrap(), 1);
        assert!(!fam.contains_member(&sp(2, 3, &[&[1, 0, 0]])));
    }

    #[test]
    fn spread_family_lattice_ops() {
        let budget = Budget::unlimited();
        let m = full_spread();
        let fam = compute_zflats(&m, &budget).unwrap();
        // Zero, the five spread members, and the full space.
        assert_eq!(fam.len(), 7);
        assert_eq!(fam.profile(), vec![(0, 0, 1), (2, 1, 5), (4, 2, 1)]);
        // Each member covers 0 and is covered by E.
        assert_eq!(
            fam.covers(),
            &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 6), (2, 6), (3, 6), (4, 6), (5, 6)]
        );
        let v1 = fam.members()[1].0.clone();
        let v2 = fam.members()[2].0.clone();
        assert!(fam.meet(&v1, &v2).unwrap().is_zero());
        assert_eq!(fam.join(&v1, &v2).unwrap(), Subspace::full(2, 4));
        let outsider = sp(2, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        assert!(matches!(fam.meet(&outsider, &v1), Err(Error::NotAMember)));
        assert!(matches!(fam.member_rank(&outsider), Err(Error::NotAMember)));
    }

    #[test]
    fn meet_and_join_need_an_oracle() {
        let z = sp(2, 3, &[&[1, 0, 1], &[0, 1, 1]]);
        let fam = CyclicFlatFamily::from_members(
            2,
            3,
            &[(Subspace::zero(2, 3), 0), (z.clone(), 1)],
        )
        .unwrap();
        assert!(fam.oracle().is_none());
        assert!(matches!(
            fam.meet(&Subspace::zero(2, 3), &z),
            Err(Error::NotComputedFromOracle)
        ));
        // Rank reconstruction works without an oracle.
        assert_eq!(fam.rank_of(&z).unwrap(), 1);
    }

    #[test]
    fn restriction_of_family_matches_restricted_oracle() {
        let budget = Budget::unlimited();
        let m = full_spread();
        let fam = compute_zflats(&m, &budget).unwrap();
        let v1 = fam.members()[1].0.clone();
        let restricted = fam.restrict_to(&v1).unwrap();
        assert_eq!(restricted.n(), 2);
        // {0, V1} re-coordinatized: V1 becomes the full small space.
        assert_eq!(
            restricted.members(),
            &[(Subspace::zero(2, 2), 0), (Subspace::full(2, 2), 1)]
        );
        // And it agrees with a fresh scan of the restricted oracle.
        let direct = compute_zflats(&m.restriction(&v1).unwrap(), &budget).unwrap();
        assert_eq!(restricted.members(), direct.members());
        // Restriction target must be a member.
        let outsider = sp(2, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        assert!(matches!(fam.restrict_to(&outsider), Err(Error::NotAMember)));
    }

    #[test]
    fn validate_family_levels() {
        let budget = Budget::unlimited();
        let zero4 = Subspace::zero(2, 4);
        // A valid single-member partial spread family.
        let p = sp(2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let fam = vec![(zero4.clone(), 0), (p.clone(), 1), (Subspace::full(2, 4), 2)];
        validate_family(2, 4, &fam, ValidationLevel::Structural, &budget).unwrap();
        validate_family(2, 4, &fam, ValidationLevel::Full, &budget).unwrap();
        // Two planes sharing a line: structurally fine, but the induced
        // rank function breaks submodularity, which only Full detects.
        let p2 = sp(2, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        let bad = vec![
            (zero4.clone(), 0),
            (p.clone(), 1),
            (p2, 1),
            (Subspace::full(2, 4), 2),
        ];
        validate_family(2, 4, &bad, ValidationLevel::Structural, &budget).unwrap();
        assert!(matches!(
            validate_family(2, 4, &bad, ValidationLevel::Full, &budget),
            Err(Error::InconsistentFamily(_))
        ));
        // Structural failures are caught at either level.
        let broken = vec![(zero4, 0), (Subspace::full(2, 4), 4)];
        assert!(matches!(
            validate_family(2, 4, &broken, ValidationLevel::Structural, &budget),
            Err(Error::InconsistentFamily(_))
        ));
    }

    #[test]
    fn hasse_export_shape() {
        let budget = Budget::unlimited();
        let m = QMatroid::uniform(2, 4, 2).unwrap();
        let fam = compute_zflats(&m, &budget).unwrap();
        let dot = fam.export_hasse();
        assert!(dot.starts_with("digraph cyclic_flats {"));
        assert!(dot.contains("z0 [label=\"<> dim 0 rank 0\"];"));
        assert!(dot.contains("dim 4 rank 2"));
        assert!(dot.contains("z0 -> z1;"));
        assert!(dot.ends_with("}\n"));
    }

    #[test]
    fn scan_respects_budget() {
        let m = QMatroid::uniform(2, 6, 3).unwrap();
        assert!(matches!(
            compute_zflats(&m, &Budget::from_ms(0)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
