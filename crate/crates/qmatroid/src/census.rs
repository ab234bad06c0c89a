//! Full-lattice classification: counting flats, cyclic spaces, cyclic
//! flats, independent and dependent spaces, circuits, and bases.
//!
//! The census streams the canonical subspace enumeration in shards
//! (embarrassingly parallel map-reduce over an immutable oracle; the shard
//! count never changes the counts, only the schedule) and classifies each
//! subspace with shared intermediate results: the rank is computed once and
//! the hyperplane scan is shared between the cyclic and circuit tests.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::matroid::QMatroid;
use crate::subspace::{enumerate_subspaces, total_subspaces, DimFilter, Subspace};
use crate::{Budget, Error, Result};

/// All predicate verdicts for one subspace, evaluated together.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub rank: u32,
    pub independent: bool,
    pub dependent: bool,
    pub flat: bool,
    pub cyclic: bool,
    pub cyclic_flat: bool,
    pub circuit: bool,
    pub basis: bool,
}

/// Classifies one subspace, computing the rank once and sharing the
/// hyperplane scan between the cyclic and circuit verdicts.
pub fn classify(m: &QMatroid, v: &Subspace) -> Result<Classification> {
    let rank = m.rank(v)?;
    Ok(classify_with_rank(m, v, rank))
}

fn classify_with_rank(m: &QMatroid, v: &Subspace, rank: u32) -> Classification {
    let d = v.dim();
    let independent = rank == d;
    // Flat: every line extension raises the rank (abort on the first that
    // does not).
    let flat = v.for_each_line_outside(|line| m.rank_u(&v.plus_line(line)) > rank);
    // Cyclic and circuit share one hyperplane scan. A nonzero independent
    // space is neither (some hyperplane loses rank; it is not dependent),
    // so the scan is skipped entirely.
    let (cyclic, circuit) = if d == 0 {
        (true, false)
    } else if independent {
        (false, false)
    } else {
        let mut cyclic = true;
        let mut circuit = true;
        v.for_each_hyperplane(|_, h| {
            let rh = m.rank_u(h);
            if rh < rank {
                cyclic = false;
            }
            if rh < h.dim() {
                circuit = false;
            }
            cyclic || circuit
        });
        (cyclic, circuit)
    };
    Classification {
        rank,
        independent,
        dependent: !independent,
        flat,
        cyclic,
        cyclic_flat: cyclic && flat,
        circuit,
        basis: independent && d == m.rank_full(),
    }
}

/// Aggregate counts over the whole subspace lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub descriptor: String,
    pub flats: u64,
    pub cyclic: u64,
    pub cyclic_flats: u64,
    pub independent: u64,
    pub dependent: u64,
    pub circuits: u64,
    pub bases: u64,
    /// Wall time; excluded from serialized output so identical inputs give
    /// byte-identical reports.
    #[serde(skip)]
    pub elapsed_ms: u64,
    /// Shard count of the run; excluded so the report is invariant under
    /// re-sharding.
    #[serde(skip)]
    pub shards: u32,
    pub notes: String,
}

impl CensusReport {
    /// The seven counts as one CSV row, in table-column order.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.flats,
            self.cyclic,
            self.cyclic_flats,
            self.independent,
            self.dependent,
            self.circuits,
            self.bases
        )
    }

    pub fn counts(&self) -> (u64, u64, u64, u64, u64, u64, u64) {
        (
            self.flats,
            self.cyclic,
            self.cyclic_flats,
            self.independent,
            self.dependent,
            self.circuits,
            self.bases,
        )
    }
}

#[derive(Clone, Copy, Default)]
struct Counts {
    flats: u64,
    cyclic: u64,
    cyclic_flats: u64,
    independent: u64,
    dependent: u64,
    circuits: u64,
    bases: u64,
}

impl Counts {
    fn absorb(&mut self, c: &Classification) {
        self.flats += c.flat as u64;
        self.cyclic += c.cyclic as u64;
        self.cyclic_flats += c.cyclic_flat as u64;
        self.independent += c.independent as u64;
        self.dependent += c.dependent as u64;
        self.circuits += c.circuit as u64;
        self.bases += c.basis as u64;
    }

    fn merge(mut self, other: Counts) -> Counts {
        self.flats += other.flats;
        self.cyclic += other.cyclic;
        self.cyclic_flats += other.cyclic_flats;
        self.independent += other.independent;
        self.dependent += other.dependent;
        self.circuits += other.circuits;
        self.bases += other.bases;
        self
    }
}

/// Classifies every subspace of the ground space and counts each category.
/// Counts are independent of the shard count; a blown budget aborts the
/// whole run without emitting partial counts.
pub fn census(m: &QMatroid, shards: u32, budget: &Budget) -> Result<CensusReport> {
    let start = Instant::now();
    let shards = shards.max(1);
    let stream = enumerate_subspaces(m.q(), m.n(), DimFilter::All)?;
    // Resolve before the parallel scan so every shard shares the value.
    let _ = m.rank_full();
    let total: u64 = (0..shards)
        .map(|s| {
            let (lo, hi) = stream.shard_bounds(s, shards);
            hi - lo
        })
        .sum();
    debug_assert_eq!(total, stream.total());

    let merged = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut counts = Counts::default();
            let (lo, hi) = stream.shard_bounds(s, shards);
            for (i, v) in stream.range(lo, hi).enumerate() {
                if i % 512 == 0 {
                    budget.check(|| {
                        format!("shard {s}: {} of {} subspaces", lo + i as u64, stream.total())
                    })?;
                }
                counts.absorb(&classify_with_rank(m, &v, m.rank_u(&v)));
            }
            Ok(counts)
        })
        .try_reduce(Counts::default, |a, b| Ok(a.merge(b)))?;

    let notes = format!(
        "cache {}; {}",
        if m.cache_enabled() { "on" } else { "off" },
        if m.defining_flats().is_some() {
            "rank via cyclic-flat reconstruction"
        } else {
            "direct rank oracle"
        }
    );
    let report = CensusReport {
        descriptor: m.descriptor(),
        flats: merged.flats,
        cyclic: merged.cyclic,
        cyclic_flats: merged.cyclic_flats,
        independent: merged.independent,
        dependent: merged.dependent,
        circuits: merged.circuits,
        bases: merged.bases,
        elapsed_ms: start.elapsed().as_millis() as u64,
        shards,
        notes,
    };
    debug_assert_eq!(
        (report.independent + report.dependent) as u128,
        total_subspaces(m.q() as u64, m.n())
    );
    Ok(report)
}

/// Outcome of comparing a rank oracle against a generator matrix.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub checked: u64,
    /// First mismatch in enumeration order: (subspace rows, target rank,
    /// matrix rank).
    pub mismatch: Option<(Vec<Vec<u8>>, u32, u32)>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Checks that `target` has the same rank as the matroid of the matrix `g`
/// over `ext` on every subspace of the ground space; reports the first
/// mismatch in canonical enumeration order.
pub fn verify_representation(
    target: &QMatroid,
    ext: &crate::field::FieldSpec,
    g: &[Vec<crate::field::FieldElement>],
    budget: &Budget,
) -> Result<VerificationReport> {
    let repr = QMatroid::from_representation(ext, target.n(), g)?;
    if repr.q() != target.q() {
        return Err(Error::GroundMismatch(format!(
            "matrix field has characteristic {}, ground expects {}",
            repr.q(),
            target.q()
        )));
    }
    let stream = enumerate_subspaces(target.q(), target.n(), DimFilter::All)?;
    let mut checked = 0u64;
    for v in stream.iter() {
        checked += 1;
        if checked % 1024 == 0 {
            budget.check(|| format!("{checked} of {} subspaces compared", stream.total()))?;
        }
        let want = target.rank_u(&v);
        let got = repr.rank_u(&v);
        if want != got {
            return Ok(VerificationReport {
                checked,
                mismatch: Some((v.basis_rows(), want, got)),
            });
        }
    }
    Ok(VerificationReport { checked, mismatch: None })
}
