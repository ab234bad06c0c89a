//! Rank oracles for q-matroids.
//!
//! A q-matroid is a pair (E, rho) where E = GF(q)^n and rho assigns to every
//! subspace V <= E an integer rank such that
//!
//! * 0 <= rho(V) <= dim V,
//! * V <= W implies rho(V) <= rho(W), and
//! * rho(V + W) + rho(V /\ W) <= rho(V) + rho(W).
//!
//! [`QMatroid`] is a cheap-to-clone handle around one of several oracle
//! kinds: column spaces of a matrix over an extension field, uniform
//! matroids, rank functions reconstructed from cyclic-flat data, partial
//! spreads, plus duals, restrictions and contractions of any of these.
//! Derived operators (closure, cyclic core, the standard predicates) are
//! computed generically from rank queries, so they work uniformly across
//! all oracle kinds.

use crate::field::{FieldElement, FieldSpec};
use crate::subspace::{
    enumerate_subspaces, gf2, gfp, is_prime_u32, quotient_coords, restrict_coords, DimFilter,
    GroundMatrix, Line, QuotientMap, RestrictMap, Subspace,
};
use crate::{Budget, Error, Result};
use dashmap::DashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, OnceLock};

/// Ambient dimension up to which the per-matroid rank memo cache is enabled
/// by default. Above this the subspace lattice is large enough that census
/// runs stream instead of memoizing.
pub const CACHE_DEFAULT_MAX_N: u32 = 7;

/// A q-matroid handle. Cloning shares the underlying oracle and its caches.
#[derive(Clone)]
pub struct QMatroid {
    inner: Arc<Inner>,
}

struct Inner {
    q: u32,
    n: u32,
    kind: Kind,
    cache: DashMap<Subspace, u32>,
    cache_on: AtomicBool,
    rank_full: OnceLock<u32>,
    loops: OnceLock<Subspace>,
    top: OnceLock<Subspace>,
}

enum Kind {
    Uniform {
        k: u32,
    },
    Representable(ReprData),
    ZDefined {
        members: Arc<Vec<(Subspace, u32)>>,
    },
    Spread {
        members: Arc<Vec<Subspace>>,
    },
    Dual {
        of: QMatroid,
    },
    Restrict {
        of: QMatroid,
        map: RestrictMap,
    },
    Contract {
        of: QMatroid,
        map: QuotientMap,
        rank_x: u32,
    },
    /// Rank function supplied as a closure; used for direct sums, unions and
    /// ad-hoc oracles in tests.
    Custom {
        name: String,
        f: Arc<dyn Fn(&Subspace) -> u32 + Send + Sync>,
    },
}

struct ReprData {
    ext: FieldSpec,
    k: usize,
    /// Columns of the generator matrix: cols[j][i] = G[i][j].
    cols: Vec<Vec<FieldElement>>,
    /// For q = 2 and small n: precomputed column sums for every coordinate
    /// mask, so a rank query gathers columns with a table lookup.
    mask_table: OnceLock<Vec<Vec<FieldElement>>>,
}

impl QMatroid {
    fn build(q: u32, n: u32, kind: Kind) -> QMatroid {
        QMatroid {
            inner: Arc::new(Inner {
                q,
                n,
                kind,
                cache: DashMap::new(),
                cache_on: AtomicBool::new(n <= CACHE_DEFAULT_MAX_N),
                rank_full: OnceLock::new(),
                loops: OnceLock::new(),
                top: OnceLock::new(),
            }),
        }
    }

    // -- constructors ------------------------------------------------------

    /// The uniform q-matroid U_{k,n}(q): rho(V) = min(dim V, k).
    pub fn uniform(q: u32, n: u32, k: u32) -> Result<QMatroid> {
        if !is_prime_u32(q) {
            return Err(Error::FieldMismatch(format!("ground field order {q} must be prime")));
        }
        if k > n {
            return Err(Error::KOutOfRange { k, n });
        }
        Ok(Self::build(q, n, Kind::Uniform { k }))
    }

    /// The q-matroid of a k x n generator matrix over an extension field
    /// GF(p^m): rho(V) = rank of G * Y^T where the rows of Y form a basis
    /// of V. The ground space is GF(p)^n. The matrix must have full row
    /// rank.
    pub fn from_representation(
        ext: &FieldSpec,
        n: u32,
        rows: &[Vec<FieldElement>],
    ) -> Result<QMatroid> {
        let p = ext.p();
        if p > 251 {
            return Err(Error::InvalidField(format!(
                "ground characteristic {p} exceeds the supported maximum of 251"
            )));
        }
        let q = p as u32;
        let k = rows.len();
        if k as u32 > n {
            return Err(Error::RankDeficientG);
        }
        for row in rows {
            if row.len() != n as usize {
                return Err(Error::DimensionMismatch(format!(
                    "generator row has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &e in row {
                if e >= ext.order() {
                    return Err(Error::InvalidField(format!(
                        "element index {e} out of range for {ext:?}"
                    )));
                }
            }
        }
        let cols: Vec<Vec<FieldElement>> =
            (0..n as usize).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        if ext_rank(ext, cols.iter().cloned()) < k as u32 {
            return Err(Error::RankDeficientG);
        }
        let data = ReprData { ext: ext.clone(), k, cols, mask_table: OnceLock::new() };
        Ok(Self::build(q, n, Kind::Representable(data)))
    }

    /// Reconstructs a q-matroid from its cyclic flats and their ranks via
    /// rho(V) = min over members (rho(Z) + dim(V + Z) - dim Z).
    ///
    /// Structural sanity is enforced here (unique least member of rank 0,
    /// unique greatest member, and for every nested pair Z < Z' strictly
    /// 0 < rho(Z') - rho(Z) < dim Z' - dim Z); full soundness (axioms and
    /// recovery of the family from the induced oracle) is a separate,
    /// heavier check.
    pub fn from_cyclic_flats(q: u32, n: u32, members: &[(Subspace, u32)]) -> Result<QMatroid> {
        if !is_prime_u32(q) {
            return Err(Error::FieldMismatch(format!("ground field order {q} must be prime")));
        }
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut members = members.to_vec();
        for (z, _) in &members {
            if z.q() != q || z.n() != n {
                return Err(Error::GroundMismatch(format!(
                    "family member lives in GF({})^{}, expected GF({q})^{n}",
                    z.q(),
                    z.n()
                )));
            }
        }
        members.sort_by(|a, b| a.0.cmp(&b.0));
        for w in members.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InconsistentFamily(format!("duplicate member {:?}", w[0].0)));
            }
        }
        let (least, least_rank) = &members[0];
        if *least_rank != 0 {
            return Err(Error::InconsistentFamily(format!(
                "least member {least:?} must have rank 0, got {least_rank}"
            )));
        }
        let (greatest, _) = &members[members.len() - 1];
        for (z, r) in &members {
            if !z.contains(least) {
                return Err(Error::InconsistentFamily(format!(
                    "no least member: {z:?} does not contain {least:?}"
                )));
            }
            if !greatest.contains(z) {
                return Err(Error::InconsistentFamily(format!(
                    "no greatest member: {greatest:?} does not contain {z:?}"
                )));
            }
            if *r > z.dim() {
                return Err(Error::InconsistentFamily(format!(
                    "member {z:?} has rank {r} exceeding its dimension"
                )));
            }
        }
        for (za, ra) in &members {
            for (zb, rb) in &members {
                if za != zb && zb.contains(za) {
                    // za < zb strictly: require 0 < rb - ra < dim zb - dim za.
                    let dd = zb.dim() - za.dim();
                    if *rb <= *ra || rb - ra >= dd {
                        return Err(Error::InconsistentFamily(format!(
                            "nested members {za:?} (rank {ra}) and {zb:?} (rank {rb}) violate \
                             strict rank growth"
                        )));
                    }
                }
            }
        }
        Ok(Self::build(q, n, Kind::ZDefined { members: Arc::new(members) }))
    }

    /// The rank-2 q-matroid of a partial spread of 2-dimensional subspaces
    /// of GF(q)^4: rho(V) = 1 if V is a spread member, min(dim V, 2)
    /// otherwise. An empty spread gives U_{2,4}(q).
    pub fn from_spread(q: u32, n: u32, members: &[Subspace]) -> Result<QMatroid> {
        if !is_prime_u32(q) {
            return Err(Error::FieldMismatch(format!("ground field order {q} must be prime")));
        }
        if n != 4 {
            return Err(Error::WrongDimension(format!(
                "spread matroids live in GF(q)^4, got ambient dimension {n}"
            )));
        }
        let mut members = members.to_vec();
        for z in &members {
            if z.q() != q || z.n() != n {
                return Err(Error::GroundMismatch(format!(
                    "spread member lives in GF({})^{}, expected GF({q})^{n}",
                    z.q(),
                    z.n()
                )));
            }
            if z.dim() != 2 {
                return Err(Error::WrongDimension(format!(
                    "spread member {z:?} has dimension {}, expected 2",
                    z.dim()
                )));
            }
        }
        members.sort();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if members[i].intersect(&members[j])?.dim() != 0 {
                    return Err(Error::NotASpread(format!(
                        "members {:?} and {:?} intersect nontrivially",
                        members[i], members[j]
                    )));
                }
            }
        }
        Ok(Self::build(q, n, Kind::Spread { members: Arc::new(members) }))
    }

    /// The dual q-matroid: rho*(V) = dim V + rho(V^perp) - rho(E), with the
    /// orthogonal complement taken for the standard dot product.
    pub fn dual(&self) -> QMatroid {
        Self::build(self.q(), self.n(), Kind::Dual { of: self.clone() })
    }

    /// Restriction M|_X, with ground space re-coordinatized to GF(q)^dim(X)
    /// via the canonical basis of X.
    pub fn restriction(&self, x: &Subspace) -> Result<QMatroid> {
        self.check_space(x)?;
        let map = restrict_coords(x);
        Ok(Self::build(self.q(), x.dim(), Kind::Restrict { of: self.clone(), map }))
    }

    /// Contraction M/X on GF(q)^(n - dim X): rho(W) = rho(pi^-1(W)) - rho(X),
    /// where pi is the projection recorded alongside the quotient
    /// coordinates.
    pub fn contraction(&self, x: &Subspace) -> Result<QMatroid> {
        self.check_space(x)?;
        let rank_x = self.rank_u(x);
        let map = quotient_coords(x);
        Ok(Self::build(self.q(), self.n() - x.dim(), Kind::Contract {
            of: self.clone(),
            map,
            rank_x,
        }))
    }

    /// An oracle given by an arbitrary rank function. The caller is
    /// responsible for the axioms; `axiom_check` can audit.
    pub fn from_rank_fn(
        q: u32,
        n: u32,
        name: &str,
        f: impl Fn(&Subspace) -> u32 + Send + Sync + 'static,
    ) -> QMatroid {
        Self::build(q, n, Kind::Custom { name: name.to_string(), f: Arc::new(f) })
    }

    // -- basic accessors ----------------------------------------------------

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn n(&self) -> u32 {
        self.inner.n
    }

    /// The full ground space E = GF(q)^n.
    pub fn ambient(&self) -> Subspace {
        Subspace::full(self.q(), self.n())
    }

    /// A short tag describing how this oracle was constructed.
    pub fn descriptor(&self) -> String {
        match &self.inner.kind {
            Kind::Uniform { .. } => "uniform".into(),
            Kind::Representable(_) => "representable".into(),
            Kind::ZDefined { .. } => "zdefined".into(),
            Kind::Spread { .. } => "spread".into(),
            Kind::Dual { of } => format!("dual({})", of.descriptor()),
            Kind::Restrict { of, .. } => format!("restriction({})", of.descriptor()),
            Kind::Contract { of, .. } => format!("contraction({})", of.descriptor()),
            Kind::Custom { name, .. } => name.clone(),
        }
    }

    /// Members of the defining cyclic-flat family, if this oracle is
    /// family-defined.
    pub fn defining_flats(&self) -> Option<&[(Subspace, u32)]> {
        match &self.inner.kind {
            Kind::ZDefined { members } => Some(members),
            _ => None,
        }
    }

    /// Members of the defining partial spread, if this oracle is
    /// spread-defined.
    pub fn spread_members(&self) -> Option<&[Subspace]> {
        match &self.inner.kind {
            Kind::Spread { members } => Some(members),
            _ => None,
        }
    }

    fn check_space(&self, v: &Subspace) -> Result<()> {
        if v.q() != self.q() || v.n() != self.n() {
            return Err(Error::GroundMismatch(format!(
                "subspace of GF({})^{} queried against a q-matroid on GF({})^{}",
                v.q(),
                v.n(),
                self.q(),
                self.n()
            )));
        }
        Ok(())
    }

    // -- rank ---------------------------------------------------------------

    /// Rank of a subspace. Errors only when the subspace lives in a
    /// different ambient space.
    pub fn rank(&self, v: &Subspace) -> Result<u32> {
        self.check_space(v)?;
        Ok(self.rank_u(v))
    }

    /// Rank of the full ground space (computed once).
    pub fn rank_full(&self) -> u32 {
        *self.inner.rank_full.get_or_init(|| self.rank_u(&self.ambient()))
    }

    /// dim V - rho(V).
    pub fn nullity(&self, v: &Subspace) -> Result<u32> {
        Ok(v.dim() - self.rank(v)?)
    }

    /// Rank without the ambient check; internal hot path.
    pub(crate) fn rank_u(&self, v: &Subspace) -> u32 {
        debug_assert!(v.q() == self.q() && v.n() == self.n());
        if self.inner.cache_on.load(Ordering::Relaxed) {
            if let Some(r) = self.inner.cache.get(v) {
                return *r;
            }
            let r = self.rank_raw(v);
            self.inner.cache.insert(v.clone(), r);
            r
        } else {
            self.rank_raw(v)
        }
    }

    fn rank_raw(&self, v: &Subspace) -> u32 {
        match &self.inner.kind {
            Kind::Uniform { k } => v.dim().min(*k),
            Kind::Representable(data) => repr_rank(data, v),
            Kind::ZDefined { members } => {
                let mut best = u32::MAX;
                for (z, r) in members.iter() {
                    best = best.min(r + dim_of_sum(v, z) - z.dim());
                }
                best
            }
            Kind::Spread { members } => {
                let d = v.dim();
                if d == 2 && members.binary_search(v).is_ok() {
                    1
                } else {
                    d.min(2)
                }
            }
            Kind::Dual { of } => v.dim() + of.rank_u(&v.orthogonal()) - of.rank_full(),
            Kind::Restrict { of, map } => of.rank_u(&map.from_sub(v)),
            Kind::Contract { of, map, rank_x } => of.rank_u(&map.lift(v)) - rank_x,
            Kind::Custom { f, .. } => f(v),
        }
    }

    /// Enables or disables the rank memo cache (default: enabled for
    /// ambient dimension at most 7).
    pub fn set_cache_enabled(&self, on: bool) {
        self.inner.cache_on.store(on, Ordering::Relaxed);
    }

    pub fn cache_enabled(&self) -> bool {
        self.inner.cache_on.load(Ordering::Relaxed)
    }

    // -- derived operators ---------------------------------------------------

    /// Closure: cl(V) = V plus every line x with rho(V + x) = rho(V). One
    /// pass suffices because rank-preserving extensions are closed under
    /// sums.
    pub fn closure(&self, v: &Subspace) -> Result<Subspace> {
        self.check_space(v)?;
        Ok(self.closure_u(v))
    }

    pub(crate) fn closure_u(&self, v: &Subspace) -> Subspace {
        let r = self.rank_u(v);
        let mut ext: Vec<Line> = Vec::new();
        v.for_each_line_outside(|x| {
            if self.rank_u(&v.plus_line(x)) == r {
                ext.push(x.clone());
            }
            true
        });
        if ext.is_empty() {
            v.clone()
        } else {
            v.plus_lines(&ext)
        }
    }

    /// Cyclic core: the largest cyclic subspace of V, obtained as the
    /// intersection of the rank-deficient hyperplanes of V (or V itself if
    /// none is deficient).
    pub fn cyclic_core(&self, v: &Subspace) -> Result<Subspace> {
        self.check_space(v)?;
        Ok(self.cyclic_core_u(v))
    }

    pub(crate) fn cyclic_core_u(&self, v: &Subspace) -> Subspace {
        let d = v.dim();
        if d == 0 {
            return v.clone();
        }
        let r = self.rank_u(v);
        if r == d {
            // Independent and nonzero: every hyperplane is deficient and
            // the hyperplanes of V intersect trivially.
            return Subspace::zero(self.q(), self.n());
        }
        // Collect the functionals cutting out deficient hyperplanes; the
        // core is the joint kernel, pushed back through V's coordinates.
        let mut deficient_masks: Vec<u64> = Vec::new();
        let mut deficient_vecs: Vec<Vec<u8>> = Vec::new();
        v.for_each_hyperplane(|phi, w| {
            if self.rank_u(w) < r {
                match phi {
                    Line::Mask(m) => deficient_masks.push(*m),
                    Line::Ints(c) => deficient_vecs.push(c.clone()),
                }
            }
            true
        });
        if deficient_masks.is_empty() && deficient_vecs.is_empty() {
            return v.clone();
        }
        let coeff_kernel = if self.q() == 2 && self.n() <= 64 {
            let rows = gf2::nullspace(&deficient_masks, d);
            Subspace::from_masks(d, &rows)
        } else {
            let flat: Vec<u8> = deficient_vecs.concat();
            let kernel = gfp::nullspace(&flat, d, self.q());
            let rows: Vec<Vec<u8>> =
                kernel.chunks_exact(d.max(1) as usize).map(|r| r.to_vec()).collect();
            Subspace::from_generic_rows(self.q(), d, &rows)
        };
        restrict_coords(v).from_sub(&coeff_kernel)
    }

    /// cl(0): the largest subspace of rank 0.
    pub fn loop_space(&self) -> Subspace {
        self.inner
            .loops
            .get_or_init(|| self.closure_u(&Subspace::zero(self.q(), self.n())))
            .clone()
    }

    /// cyc(E): the largest cyclic subspace of the ground space.
    pub fn cyclic_top(&self) -> Subspace {
        self.inner.top.get_or_init(|| self.cyclic_core_u(&self.ambient())).clone()
    }

    /// Full means cl(0) = 0 and cyc(E) = E: no loops and no free part.
    pub fn is_full(&self) -> bool {
        self.loop_space().is_zero() && self.cyclic_top().is_full()
    }

    // -- predicates -----------------------------------------------------------

    pub fn is_independent(&self, v: &Subspace) -> Result<bool> {
        Ok(self.rank(v)? == v.dim())
    }

    pub fn is_dependent(&self, v: &Subspace) -> Result<bool> {
        Ok(self.rank(v)? < v.dim())
    }

    /// Flat: no line outside V extends it without raising the rank.
    pub fn is_flat(&self, v: &Subspace) -> Result<bool> {
        self.check_space(v)?;
        let r = self.rank_u(v);
        Ok(v.for_each_line_outside(|x| self.rank_u(&v.plus_line(x)) != r))
    }

    /// Cyclic: every hyperplane of V has the same rank as V (the zero
    /// space is cyclic; nonzero independent spaces never are).
    pub fn is_cyclic(&self, v: &Subspace) -> Result<bool> {
        self.check_space(v)?;
        let d = v.dim();
        if d == 0 {
            return Ok(true);
        }
        let r = self.rank_u(v);
        if r == d {
            return Ok(false);
        }
        Ok(v.for_each_hyperplane(|_, w| self.rank_u(w) == r))
    }

    /// Circuit: dependent, with every hyperplane independent.
    pub fn is_circuit(&self, v: &Subspace) -> Result<bool> {
        self.check_space(v)?;
        if self.rank_u(v) == v.dim() {
            return Ok(false);
        }
        Ok(v.for_each_hyperplane(|_, w| self.rank_u(w) == w.dim()))
    }

    pub fn is_spanning(&self, v: &Subspace) -> Result<bool> {
        Ok(self.rank(v)? == self.rank_full())
    }

    pub fn is_basis(&self, v: &Subspace) -> Result<bool> {
        Ok(v.dim() == self.rank_full() && self.rank(v)? == v.dim())
    }

    // -- audits ----------------------------------------------------------------

    /// Checks the rank axioms, either over every pair of subspaces or over
    /// seeded random samples. Returns the first violation found.
    pub fn axiom_check(&self, mode: CheckMode, budget: &Budget) -> Result<AxiomReport> {
        let stream = enumerate_subspaces(self.q(), self.n(), DimFilter::All)?;
        let mut checked: u64 = 0;
        match mode {
            CheckMode::Exhaustive => {
                let all: Vec<Subspace> = stream.iter().collect();
                // (R1) bounds everywhere.
                for v in &all {
                    let r = self.rank_u(v);
                    if r > v.dim() {
                        return Ok(AxiomReport {
                            checked,
                            violation: Some(Violation::Bounds { space: v.clone(), rank: r }),
                        });
                    }
                    checked += 1;
                }
                // (R2) monotonicity on covers, which implies it on chains.
                for v in &all {
                    budget.check(|| format!("axiom check, monotonicity at {checked} cases"))?;
                    let rv = self.rank_u(v);
                    let mut bad: Option<Subspace> = None;
                    v.for_each_line_outside(|x| {
                        let w = v.plus_line(x);
                        if self.rank_u(&w) < rv {
                            bad = Some(w);
                            return false;
                        }
                        true
                    });
                    checked += 1;
                    if let Some(w) = bad {
                        return Ok(AxiomReport {
                            checked,
                            violation: Some(Violation::Monotone { inner: v.clone(), outer: w }),
                        });
                    }
                }
                // (R3) submodularity over all unordered pairs.
                for (i, a) in all.iter().enumerate() {
                    budget.check(|| format!("axiom check, submodularity at {checked} cases"))?;
                    for b in &all[i..] {
                        if let Some(v) = self.submodular_violation(a, b)? {
                            return Ok(AxiomReport { checked, violation: Some(v) });
                        }
                        checked += 1;
                    }
                }
                Ok(AxiomReport { checked, violation: None })
            }
            CheckMode::Sampled { pairs, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let total = stream.total();
                for t in 0..pairs {
                    if t % 512 == 0 {
                        budget.check(|| format!("axiom check, {t} of {pairs} sampled pairs"))?;
                    }
                    let a = stream.at(rng.gen_range(0..total));
                    let b = stream.at(rng.gen_range(0..total));
                    for v in [&a, &b] {
                        let r = self.rank_u(v);
                        if r > v.dim() {
                            return Ok(AxiomReport {
                                checked,
                                violation: Some(Violation::Bounds { space: v.clone(), rank: r }),
                            });
                        }
                    }
                    let s = a.sum(&b)?;
                    let rs = self.rank_u(&s);
                    for v in [&a, &b] {
                        if self.rank_u(v) > rs {
                            return Ok(AxiomReport {
                                checked,
                                violation: Some(Violation::Monotone {
                                    inner: v.clone(),
                                    outer: s.clone(),
                                }),
                            });
                        }
                    }
                    if let Some(v) = self.submodular_violation(&a, &b)? {
                        return Ok(AxiomReport { checked, violation: Some(v) });
                    }
                    checked += 1;
                }
                Ok(AxiomReport { checked, violation: None })
            }
        }
    }

    fn submodular_violation(&self, a: &Subspace, b: &Subspace) -> Result<Option<Violation>> {
        let s = a.sum(b)?;
        let i = a.intersect(b)?;
        if self.rank_u(&s) + self.rank_u(&i) > self.rank_u(a) + self.rank_u(b) {
            Ok(Some(Violation::Submodular { a: a.clone(), b: b.clone() }))
        } else {
            Ok(None)
        }
    }

    /// Tests whether alpha carries this q-matroid onto `other`, i.e.
    /// rho_self(V) = rho_other(V * alpha) for every subspace V. Exhaustive
    /// over the subspace lattice.
    pub fn equivalent_under(&self, other: &QMatroid, alpha: &GroundMatrix) -> Result<bool> {
        if self.q() != other.q() || self.n() != other.n() {
            return Err(Error::GroundMismatch(
                "equivalence requires matching ambient spaces".into(),
            ));
        }
        if alpha.q() != self.q() || alpha.n() != self.n() {
            return Err(Error::GroundMismatch("matrix does not act on this ambient space".into()));
        }
        if !alpha.is_invertible() {
            return Err(Error::SingularAlpha);
        }
        let stream = enumerate_subspaces(self.q(), self.n(), DimFilter::All)?;
        for v in stream.iter() {
            let image = v.apply_matrix(alpha)?;
            if self.rank_u(&v) != other.rank_u(&image) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl std::fmt::Debug for QMatroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QMatroid({}, GF({})^{})", self.descriptor(), self.q(), self.n())
    }
}

/// How `axiom_check` explores the lattice.
#[derive(Clone, Copy, Debug)]
pub enum CheckMode {
    Exhaustive,
    Sampled { pairs: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    /// Number of cases examined before stopping.
    pub checked: u64,
    pub violation: Option<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Clone, Debug)]
pub enum Violation {
    /// rho(V) > dim V (or underflow wrapped).
    Bounds { space: Subspace, rank: u32 },
    /// V <= W with rho(V) > rho(W).
    Monotone { inner: Subspace, outer: Subspace },
    /// rho(V+W) + rho(V cap W) > rho(V) + rho(W).
    Submodular { a: Subspace, b: Subspace },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Bounds { space, rank } => {
                write!(f, "rank {rank} exceeds dimension of {space:?}")
            }
            Violation::Monotone { inner, outer } => {
                write!(f, "rank decreases from {inner:?} to {outer:?}")
            }
            Violation::Submodular { a, b } => {
                write!(f, "submodularity fails on {a:?} and {b:?}")
            }
        }
    }
}

/// dim(V + Z) without building the sum.
fn dim_of_sum(v: &Subspace, z: &Subspace) -> u32 {
    if let (Some(a), Some(b)) = (v.packed_rows(), z.packed_rows()) {
        gf2::rank_with_extra(a, b)
    } else {
        let (vd, n) = v.generic_rows().expect("same ambient");
        let (zd, _) = z.generic_rows().expect("same ambient");
        let mut acc = gfp::Rref::from_canonical(v.q(), n, vd);
        for row in zd.chunks_exact(n.max(1) as usize) {
            let mut r = row.to_vec();
            acc.insert(&mut r);
        }
        acc.rank() as u32
    }
}

/// Rank of a matrix over an extension field, given by columns.
fn ext_rank(ext: &FieldSpec, cols: impl Iterator<Item = Vec<FieldElement>>) -> u32 {
    // Column echelon: each stored column is normalized to lead coefficient 1
    // and reduced against all earlier stored columns.
    let mut stored: Vec<(usize, Vec<FieldElement>)> = Vec::new();
    for mut c in cols {
        for (lead, s) in &stored {
            let f = c[*lead];
            if f != 0 {
                for (ci, si) in c.iter_mut().zip(s.iter()) {
                    *ci = ext.sub(*ci, ext.mul(f, *si));
                }
            }
        }
        if let Some(lead) = c.iter().position(|&x| x != 0) {
            let inv = ext.inv(c[lead]).expect("lead is nonzero");
            if inv != 1 {
                for ci in c.iter_mut() {
                    *ci = ext.mul(*ci, inv);
                }
            }
            stored.push((lead, c));
        }
    }
    stored.len() as u32
}

fn repr_rank(data: &ReprData, v: &Subspace) -> u32 {
    let ext = &data.ext;
    let k = data.k;
    if v.is_zero() || k == 0 {
        return 0;
    }
    if let Some(rows) = v.packed_rows() {
        // Ground field GF(2): the image column of a basis mask is the XOR
        // (= field addition in characteristic 2) of the selected G-columns.
        let table = data.mask_table.get_or_init(|| {
            if v.n() <= 12 {
                let size = 1usize << v.n();
                let mut t = vec![vec![0u64; k]; size];
                for mask in 1..size {
                    let j = mask.trailing_zeros() as usize;
                    let prev = mask & (mask - 1);
                    for i in 0..k {
                        t[mask][i] = t[prev][i] ^ data.cols[j][i];
                    }
                }
                t
            } else {
                Vec::new()
            }
        });
        let col_of = |mask: u64| -> Vec<FieldElement> {
            if !table.is_empty() {
                table[mask as usize].clone()
            } else {
                let mut c = vec![0u64; k];
                let mut m = mask;
                while m != 0 {
                    let j = m.trailing_zeros() as usize;
                    m &= m - 1;
                    for (ci, gi) in c.iter_mut().zip(data.cols[j].iter()) {
                        *ci ^= gi;
                    }
                }
                c
            }
        };
        ext_rank(ext, rows.iter().map(|&m| col_of(m)))
    } else {
        let (rows, n) = v.generic_rows().expect("generic ambient");
        let cols = rows.chunks_exact(n.max(1) as usize).map(|y| {
            let mut c = vec![0u64; k];
            for (j, &yj) in y.iter().enumerate() {
                if yj != 0 {
                    let e = ext.embed_int(yj as u64);
                    for (ci, gi) in c.iter_mut().zip(data.cols[j].iter()) {
                        *ci = ext.add(*ci, ext.mul(e, *gi));
                    }
                }
            }
            c
        });
        ext_rank(ext, cols)
    }
}
