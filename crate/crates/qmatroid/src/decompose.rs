//! Irreducibility testing and decomposition into irreducible components.
//!
//! Every q-matroid splits off its loop space cl(0) (a trivial summand) and a
//! free summand of dimension codim cyc(E), leaving a *full* core (no loops,
//! cyclic ground space). A full q-matroid on a ground space of dimension at
//! least two is reducible exactly when its cyclic-flat lattice is a product:
//! there are members Z1, Z2 with Z1 (+) Z2 = E, additive ranks, and every
//! member the direct sum of a member below Z1 and one below Z2. Recursing on
//! such witnesses yields the components, which are unique up to equivalence.
//!
//! The module also hosts the pruned search for rank-preserving linear
//! equivalences between two q-matroids (anchored on cyclic flats instead of
//! raw GL enumeration) and constructors for partial-2-spread matroid inputs.

use crate::matroid::QMatroid;
use crate::subspace::{gfp, restrict_coords, GroundMatrix, Subspace};
use crate::zflats::{compute_zflats, CyclicFlatFamily};
use crate::{Budget, Error, Result};

// ---------------------------------------------------------------------------
// Split-off of trivial and free parts
// ---------------------------------------------------------------------------

/// The loop and free summands of a q-matroid, split off from its full core.
///
/// The ground space decomposes as `loops (+) gamma (+) delta` where `loops`
/// = cl(0), `loops (+) gamma` = cyc(E), and the complements are chosen
/// lexicographically least in canonical coordinates. `core` is the
/// restriction to `gamma`, re-coordinatized to GF(q)^dim(gamma), and is
/// always full.
#[derive(Clone, Debug)]
pub struct SplitOff {
    pub l: u32,
    pub f: u32,
    pub loops: Subspace,
    pub gamma: Subspace,
    pub delta: Subspace,
    pub core: QMatroid,
}

/// Splits M into its trivial part (dimension l = dim cl(0)), free part
/// (dimension f = codim cyc(E)) and full core.
pub fn split_trivial_free(m: &QMatroid) -> SplitOff {
    let loops = m.loop_space();
    let top = m.cyclic_top();
    // cl(0) is cyclic (all its hyperplanes share its rank 0), so it sits
    // inside the largest cyclic space.
    let gamma = loops.complement_in(&top);
    let delta = top.complement_in(&Subspace::full(m.q(), m.n()));
    let core = m.restriction(&gamma).expect("gamma lies in the ground space");
    SplitOff { l: loops.dim(), f: delta.dim(), loops, gamma, delta, core }
}

/// When the cyclic-flat lattice has a single member, M is the direct sum of
/// a trivial and a free q-matroid; returns (trivial dim, free dim).
pub fn single_flat_shortcut(family: &CyclicFlatFamily) -> Option<(u32, u32)> {
    if family.len() == 1 {
        let (z, _) = &family.members()[0];
        Some((z.dim(), family.n() - z.dim()))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Irreducibility
// ---------------------------------------------------------------------------

/// Verdict of [`is_irreducible`], carrying the reducibility witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// Not full: splits off a trivial part of dimension `l` and/or a free
    /// part of dimension `f` (reducible whenever the ground has dim >= 2).
    NotFull { l: u32, f: u32 },
    /// Full, but the cyclic-flat lattice factors over the complementary
    /// member pair (Z1, Z2).
    Split { z1: Subspace, z2: Subspace },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

/// Decides irreducibility. Ground spaces of dimension 1 are irreducible by
/// definition; dimension 0 is rejected.
pub fn is_irreducible(m: &QMatroid, budget: &Budget) -> Result<Irreducibility> {
    if m.n() == 0 {
        return Err(Error::ZeroGround);
    }
    if m.n() == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    let loops = m.loop_space();
    let top = m.cyclic_top();
    if !loops.is_zero() || !top.is_full() {
        return Ok(Irreducibility::NotFull { l: loops.dim(), f: m.n() - top.dim() });
    }
    let family = compute_zflats(m, budget)?;
    match split_witness(m, &family, budget)? {
        Some((z1, z2)) => Ok(Irreducibility::Split { z1, z2 }),
        None => Ok(Irreducibility::Irreducible),
    }
}

/// Scans unordered pairs of nonzero members for a lattice factorization:
/// Z1 (+) Z2 = E, additive ranks, and (A, B) -> A + B a bijection from
/// {members below Z1} x {members below Z2} onto the whole family. Pairs are
/// visited in canonical member order; the first witness wins.
fn split_witness(
    m: &QMatroid,
    family: &CyclicFlatFamily,
    budget: &Budget,
) -> Result<Option<(Subspace, Subspace)>> {
    let members = family.members();
    let rank_e = m.rank_full();
    let mut scanned = 0u64;
    for (i, (z1, r1)) in members.iter().enumerate() {
        if z1.dim() == 0 || z1.dim() >= m.n() {
            continue;
        }
        for (z2, r2) in members.iter().skip(i + 1) {
            scanned += 1;
            if scanned % 64 == 0 {
                budget.check(|| format!("{scanned} member pairs scanned"))?;
            }
            if z2.dim() == 0
                || z1.dim() + z2.dim() != m.n()
                || r1 + r2 != rank_e
                || z1.intersect(z2)?.dim() != 0
            {
                continue;
            }
            let below1: Vec<usize> =
                (0..members.len()).filter(|&k| z1.contains(&members[k].0)).collect();
            let below2: Vec<usize> =
                (0..members.len()).filter(|&k| z2.contains(&members[k].0)).collect();
            // The product map is always injective here (Z1 /\ Z2 = 0), so
            // bijectivity onto the family is a count plus membership check.
            if below1.len() * below2.len() != members.len() {
                continue;
            }
            let mut onto = true;
            'products: for &a in &below1 {
                for &b in &below2 {
                    let prod = members[a].0.sum(&members[b].0)?;
                    if !family.contains_member(&prod) {
                        onto = false;
                        break 'products;
                    }
                }
            }
            if onto {
                return Ok(Some((z1.clone(), z2.clone())));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Full decomposition
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComponentTag {
    Trivial,
    Free,
    Irreducible,
}

impl ComponentTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentTag::Trivial => "trivial",
            ComponentTag::Free => "free",
            ComponentTag::Irreducible => "irreducible",
        }
    }
}

/// One summand of a decomposition.
///
/// `oracle` lives on GF(q)^dim(ground); `basis` records the coordinate map
/// (local row i corresponds to the original-coordinate vector `basis[i]`,
/// and the rows span `ground`), so that
/// `oracle.rank(S) = input.rank(S * basis)`.
#[derive(Clone, Debug)]
pub struct Component {
    pub ground: Subspace,
    pub basis: Vec<Vec<u8>>,
    pub oracle: QMatroid,
    pub tag: ComponentTag,
    pub label: String,
}

impl Component {
    pub fn dim(&self) -> u32 {
        self.oracle.n()
    }
    pub fn rank(&self) -> u32 {
        self.oracle.rank_full()
    }
}

/// Which cyclic-flat pair produced each split, with grounds in original
/// coordinates.
#[derive(Clone, Debug)]
pub enum SplitTree {
    Leaf {
        ground: Subspace,
        tag: ComponentTag,
        rank: u32,
    },
    SplitOff {
        trivial: Vec<SplitTree>,
        free: Vec<SplitTree>,
        core: Option<Box<SplitTree>>,
    },
    Split {
        z1: Subspace,
        z2: Subspace,
        left: Box<SplitTree>,
        right: Box<SplitTree>,
    },
}

/// A full decomposition into trivial, free and irreducible components.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub descriptor: String,
    pub l: u32,
    pub f: u32,
    pub components: Vec<Component>,
    pub tree: SplitTree,
}

impl DecompositionReport {
    /// One-line rendering such as `U_{1,1} ⊕ U_1(F_2^2) ⊕ Irr(dim 4, rank 2)`.
    pub fn summary(&self) -> String {
        self.components.iter().map(|c| c.label.as_str()).collect::<Vec<_>>().join(" ⊕ ")
    }

    /// Sorted multiset of (tag, dim, rank) triples, for order-insensitive
    /// comparisons of decompositions.
    pub fn component_signature(&self) -> Vec<(&'static str, u32, u32)> {
        let mut sig: Vec<_> =
            self.components.iter().map(|c| (c.tag.as_str(), c.dim(), c.rank())).collect();
        sig.sort();
        sig
    }
}

/// Decomposes M into irreducible components. Trivial and free parts are
/// maximally split into 1-dimensional summands; the full core is split
/// recursively along cyclic-flat lattice factorizations.
pub fn decompose(m: &QMatroid, budget: &Budget) -> Result<DecompositionReport> {
    if m.n() == 0 {
        return Err(Error::ZeroGround);
    }
    let (q, n) = (m.q(), m.n());
    let split = split_trivial_free(m);
    let mut components = Vec::new();
    let mut trivial_nodes = Vec::new();
    for row in split.loops.basis_rows() {
        let ground = Subspace::span(q, n, std::slice::from_ref(&row))?;
        trivial_nodes.push(SplitTree::Leaf { ground: ground.clone(), tag: ComponentTag::Trivial, rank: 0 });
        components.push(Component {
            ground,
            basis: vec![row],
            oracle: QMatroid::uniform(q, 1, 0)?,
            tag: ComponentTag::Trivial,
            label: "U_{0,1}".into(),
        });
    }
    let mut free_nodes = Vec::new();
    for row in split.delta.basis_rows() {
        let ground = Subspace::span(q, n, std::slice::from_ref(&row))?;
        free_nodes.push(SplitTree::Leaf { ground: ground.clone(), tag: ComponentTag::Free, rank: 1 });
        components.push(Component {
            ground,
            basis: vec![row],
            oracle: QMatroid::uniform(q, 1, 1)?,
            tag: ComponentTag::Free,
            label: "U_{1,1}".into(),
        });
    }
    let core = if split.gamma.dim() > 0 {
        let basis = split.gamma.basis_rows();
        Some(Box::new(split_core(&split.core, basis, q, n, &mut components, budget)?))
    } else {
        None
    };
    Ok(DecompositionReport {
        descriptor: m.descriptor(),
        l: split.l,
        f: split.f,
        components,
        tree: SplitTree::SplitOff { trivial: trivial_nodes, free: free_nodes, core },
    })
}

/// Recursively splits a full q-matroid; `basis` expresses its local
/// coordinates in the original ambient space of dimension `ambient`.
fn split_core(
    m: &QMatroid,
    basis: Vec<Vec<u8>>,
    q: u32,
    ambient: u32,
    out: &mut Vec<Component>,
    budget: &Budget,
) -> Result<SplitTree> {
    let family = compute_zflats(m, budget)?;
    match split_witness(m, &family, budget)? {
        None => {
            let ground = Subspace::span(q, ambient, &basis)?;
            let rank = m.rank_full();
            // With exactly two cyclic flats the full matroid is uniform:
            // rank reconstruction over {0, E} gives min(dim V, rank E).
            let label = if family.len() == 2 {
                format!("U_{}(F_{}^{})", rank, q, m.n())
            } else {
                format!("Irr(dim {}, rank {})", m.n(), rank)
            };
            out.push(Component {
                ground: ground.clone(),
                basis,
                oracle: m.clone(),
                tag: ComponentTag::Irreducible,
                label,
            });
            Ok(SplitTree::Leaf { ground, tag: ComponentTag::Irreducible, rank })
        }
        Some((z1, z2)) => {
            let part = |z: &Subspace| -> Result<(QMatroid, Vec<Vec<u8>>, Subspace)> {
                let sub = m.restriction(z)?;
                let rows: Vec<Vec<u8>> =
                    z.basis_rows().iter().map(|r| into_ambient(r, &basis, q, ambient)).collect();
                let ground = Subspace::span(q, ambient, &rows)?;
                Ok((sub, rows, ground))
            };
            let (m1, b1, g1) = part(&z1)?;
            let (m2, b2, g2) = part(&z2)?;
            let left = split_core(&m1, b1, q, ambient, out, budget)?;
            let right = split_core(&m2, b2, q, ambient, out, budget)?;
            Ok(SplitTree::Split { z1: g1, z2: g2, left: Box::new(left), right: Box::new(right) })
        }
    }
}

/// Maps a local coordinate row through a basis: sum of r[i] * basis[i].
fn into_ambient(r: &[u8], basis: &[Vec<u8>], q: u32, ambient: u32) -> Vec<u8> {
    let mut out = vec![0u8; ambient as usize];
    for (c, b) in r.iter().zip(basis) {
        if *c != 0 {
            gfp::add_scaled(&mut out, b, *c, q);
        }
    }
    out
}

/// Checks that re-summing the components of a report (left fold of the
/// direct sum, under the recorded coordinate maps) reproduces the ranks of
/// the input on every subspace.
pub fn resum_matches(
    m: &QMatroid,
    report: &DecompositionReport,
    budget: &Budget,
) -> Result<bool> {
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for c in &report.components {
        rows.extend(c.basis.iter().cloned());
    }
    let t = GroundMatrix::from_rows(m.q(), &rows)?;
    if !t.is_invertible() {
        return Ok(false);
    }
    let mut sum = report.components[0].oracle.clone();
    for c in &report.components[1..] {
        sum = crate::dsum::direct_sum(&sum, &c.oracle, crate::dsum::SumStrategy::ZBased, budget)?;
    }
    let stream =
        crate::subspace::enumerate_subspaces(m.q(), m.n(), crate::subspace::DimFilter::All)?;
    let mut seen = 0u64;
    for v in stream.iter() {
        seen += 1;
        if seen % 256 == 0 {
            budget.check(|| format!("resum comparison, {seen} of {}", stream.total()))?;
        }
        if sum.rank_u(&v) != m.rank_u(&v.apply_matrix(&t)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Equivalence search
// ---------------------------------------------------------------------------

/// Result of [`equivalence_search`]: either a witness matrix, or proof of
/// inequivalence by exhaustion of the anchored candidate space.
#[derive(Clone, Debug)]
pub enum EquivalenceOutcome {
    Found(GroundMatrix),
    ExhaustedNone { candidates: u64 },
}

impl EquivalenceOutcome {
    pub fn witness(&self) -> Option<&GroundMatrix> {
        match self {
            EquivalenceOutcome::Found(alpha) => Some(alpha),
            EquivalenceOutcome::ExhaustedNone { .. } => None,
        }
    }
}

enum Slot {
    /// `rows` source rows drawn from one generating cyclic flat; its image
    /// must be one of the `pool` members of the target family.
    Flat { rows: usize, pool: Vec<usize> },
    /// Source rows completing the generating flats to a basis; images are
    /// unconstrained.
    Free { rows: usize },
}

/// Searches for an invertible alpha with rank2(V * alpha) = rank1(V) for all
/// V. Candidates are anchored on the cyclic flats: a generating set of
/// members of Z(M1) is assigned images among members of Z(M2) of equal
/// (dim, rank), basis vectors are matched in canonical order, and each
/// complete assignment is verified exhaustively. `ExhaustedNone` is a proof
/// of inequivalence; running out of budget is an error, not a verdict.
///
/// Only linear equivalence is searched: alpha acts on the ambient space as an
/// invertible matrix. Two matroids can still have isomorphic subspace
/// lattices under a non-linear, rank-preserving bijection; that weaker notion
/// is not decided here, so `ExhaustedNone` does not rule it out.
pub fn equivalence_search(
    m1: &QMatroid,
    m2: &QMatroid,
    budget: &Budget,
) -> Result<EquivalenceOutcome> {
    if m1.q() != m2.q() || m1.n() != m2.n() {
        return Err(Error::GroundMismatch(format!(
            "cannot compare GF({})^{} with GF({})^{}",
            m1.q(),
            m1.n(),
            m2.q(),
            m2.n()
        )));
    }
    let (q, n) = (m1.q(), m1.n());
    if n == 0 {
        return Ok(EquivalenceOutcome::Found(GroundMatrix::identity(q, 0)));
    }
    if m1.rank_full() != m2.rank_full() {
        return Ok(EquivalenceOutcome::ExhaustedNone { candidates: 0 });
    }
    let f1 = compute_zflats(m1, budget)?;
    let f2 = compute_zflats(m2, budget)?;
    // Equivalences preserve (dim, rank) of every cyclic flat.
    if f1.profile() != f2.profile() {
        return Ok(EquivalenceOutcome::ExhaustedNone { candidates: 0 });
    }
    budget.check(|| "candidate generation".into())?;

    // Greedy generating set: walk members in canonical order, keep the basis
    // rows that grow the span, and anchor each batch to its flat.
    let mut source_rows: Vec<Vec<u8>> = Vec::new();
    let mut slots: Vec<Slot> = Vec::new();
    for (z, r) in f1.members() {
        if source_rows.len() == n as usize {
            break;
        }
        if z.dim() == 0 {
            continue;
        }
        let mut kept = 0;
        for row in z.basis_rows() {
            if extends(q, n, &source_rows, &row) {
                source_rows.push(row);
                kept += 1;
            }
        }
        if kept == 0 {
            continue;
        }
        let pool: Vec<usize> = f2
            .members()
            .iter()
            .enumerate()
            .filter(|(_, (w, wr))| w.dim() == z.dim() && wr == r)
            .map(|(j, _)| j)
            .collect();
        slots.push(Slot::Flat { rows: kept, pool });
    }
    if source_rows.len() < n as usize {
        let span = Subspace::span(q, n, &source_rows)?;
        let completion = span.complement_in(&Subspace::full(q, n));
        let rows = completion.basis_rows();
        slots.push(Slot::Free { rows: rows.len() });
        source_rows.extend(rows);
    }
    let s_inv = GroundMatrix::from_rows(q, &source_rows)?.inverse()?;

    let mut search = Searcher {
        q,
        n,
        m1,
        m2,
        f1: &f1,
        f2: &f2,
        slots: &slots,
        s_inv,
        budget,
        target: Vec::with_capacity(n as usize),
        used: vec![false; f2.len()],
        candidates: 0,
    };
    match search.run(0)? {
        Some(alpha) => Ok(EquivalenceOutcome::Found(alpha)),
        None => Ok(EquivalenceOutcome::ExhaustedNone { candidates: search.candidates }),
    }
}

/// True when `cand` lies outside the span of `rows`.
fn extends(q: u32, n: u32, rows: &[Vec<u8>], cand: &[u8]) -> bool {
    let mut acc = gfp::Rref::new(q, n);
    for r in rows {
        let mut row = r.clone();
        acc.insert(&mut row);
    }
    let mut c = cand.to_vec();
    acc.insert(&mut c)
}

fn digits(mut idx: u64, q: u32, len: u32) -> Vec<u8> {
    let mut out = vec![0u8; len as usize];
    for d in out.iter_mut() {
        *d = (idx % q as u64) as u8;
        idx /= q as u64;
    }
    out
}

struct Searcher<'a> {
    q: u32,
    n: u32,
    m1: &'a QMatroid,
    m2: &'a QMatroid,
    f1: &'a CyclicFlatFamily,
    f2: &'a CyclicFlatFamily,
    slots: &'a [Slot],
    s_inv: GroundMatrix,
    budget: &'a Budget,
    target: Vec<Vec<u8>>,
    used: Vec<bool>,
    candidates: u64,
}

impl Searcher<'_> {
    fn run(&mut self, slot: usize) -> Result<Option<GroundMatrix>> {
        if slot == self.slots.len() {
            return self.finish();
        }
        match &self.slots[slot] {
            Slot::Flat { rows, pool } => {
                let (rows, pool) = (*rows, pool.clone());
                for w_idx in pool {
                    if self.used[w_idx] {
                        continue;
                    }
                    self.used[w_idx] = true;
                    let w = self.f2.members()[w_idx].0.clone();
                    let rm = restrict_coords(&w);
                    let (q, d) = (self.q, w.dim());
                    let count = (q as u64).pow(d);
                    let found = self
                        .pick(slot, rows, count, &|i| rm.from_sub_vector(&digits(i, q, d)))?;
                    self.used[w_idx] = false;
                    if found.is_some() {
                        return Ok(found);
                    }
                }
                Ok(None)
            }
            Slot::Free { rows } => {
                let rows = *rows;
                let count = (self.q as u64).pow(self.n);
                let q = self.q;
                let n = self.n;
                self.pick(slot, rows, count, &|i| digits(i, q, n))
            }
        }
    }

    /// Assigns `remaining` more target rows for the current slot, drawing
    /// vectors in lexicographic order from the slot's pool.
    fn pick(
        &mut self,
        slot: usize,
        remaining: usize,
        count: u64,
        vector: &dyn Fn(u64) -> Vec<u8>,
    ) -> Result<Option<GroundMatrix>> {
        if remaining == 0 {
            return self.run(slot + 1);
        }
        for idx in 1..count {
            let v = vector(idx);
            if !extends(self.q, self.n, &self.target, &v) {
                continue;
            }
            self.target.push(v);
            let found = self.pick(slot, remaining - 1, count, vector)?;
            self.target.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn finish(&mut self) -> Result<Option<GroundMatrix>> {
        self.candidates += 1;
        if self.candidates % 256 == 0 {
            let tried = self.candidates;
            self.budget.check(|| format!("{tried} candidates tried"))?;
        }
        let t = GroundMatrix::from_rows(self.q, &self.target)?;
        let alpha = self.s_inv.compose(&t)?;
        // Cheap filter: alpha must push the whole source family onto members
        // of equal rank before the exhaustive check is worth running.
        for (z, r) in self.f1.members() {
            if self.f2.member_rank(&z.apply_matrix(&alpha)?).ok() != Some(*r) {
                return Ok(None);
            }
        }
        if self.m1.equivalent_under(self.m2, &alpha)? {
            Ok(Some(alpha))
        } else {
            Ok(None)
        }
    }
}

// ---------------------------------------------------------------------------
// Spread constructions
// ---------------------------------------------------------------------------

/// The Desarguesian 2-spread of GF(q)^4: row spaces (0|I) and (I|A) for A
/// ranging over the multiplication matrices of GF(q^2). Always has q^2 + 1
/// members.
pub fn desarguesian_spread(q: u32) -> Result<Vec<Subspace>> {
    let ext = crate::field::create_field(q as u64, 2, None)?;
    let p = ext.p();
    let coords = |e: u64| -> [u8; 2] { [(e % p) as u8, ((e / p) % p) as u8] };
    let w = ext.gen_w();
    let mut members = vec![Subspace::span(q, 4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]])?];
    for c in 0..ext.order() {
        // Multiplication by c in the basis {1, w}.
        let r0 = coords(c);
        let r1 = coords(ext.mul(w, c));
        members.push(Subspace::span(
            q,
            4,
            &[vec![1, 0, r0[0], r0[1]], vec![0, 1, r1[0], r1[1]]],
        )?);
    }
    validate_partial_spread(&members)?;
    Ok(members)
}

/// Builds a partial 2-spread of GF(q)^4 from a spread set of 2x2 matrices
/// (pairwise differences invertible): members (0|I) and (I|A_i).
pub fn spread_from_matrices(q: u32, mats: &[Vec<Vec<u8>>]) -> Result<Vec<Subspace>> {
    for (i, a) in mats.iter().enumerate() {
        if a.len() != 2 || a.iter().any(|row| row.len() != 2) {
            return Err(Error::NotASpreadSet(format!("matrix {i} is not 2x2")));
        }
        if a.iter().flatten().any(|&c| c as u32 >= q) {
            return Err(Error::NotASpreadSet(format!(
                "matrix {i} has entries outside GF({q})"
            )));
        }
    }
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let d = |r: usize, c: usize| {
                (q + mats[i][r][c] as u32 - mats[j][r][c] as u32) % q
            };
            let det = (d(0, 0) * d(1, 1) % q + q - d(0, 1) * d(1, 0) % q) % q;
            if det == 0 {
                return Err(Error::NotASpreadSet(format!(
                    "difference of matrices {i} and {j} is singular"
                )));
            }
        }
    }
    let mut members = vec![Subspace::span(q, 4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]])?];
    for a in mats {
        members.push(Subspace::span(
            q,
            4,
            &[
                vec![1, 0, a[0][0], a[0][1]],
                vec![0, 1, a[1][0], a[1][1]],
            ],
        )?);
    }
    validate_partial_spread(&members)?;
    Ok(members)
}

fn validate_partial_spread(members: &[Subspace]) -> Result<()> {
    for i in 0..members.len() {
        if members[i].dim() != 2 {
            return Err(Error::NotASpreadSet(format!("member {i} is not 2-dimensional")));
        }
        for j in i + 1..members.len() {
            if members[i].intersect(&members[j])?.dim() != 0 {
                return Err(Error::NotASpreadSet(format!(
                    "members {i} and {j} intersect nontrivially"
                )));
            }
        }
    }
    Ok(())
}
