//! The JSON file format describing q-matroids, plus JSON forms of the
//! library's reports.
//!
//! A spec is a tagged union over the constructors of [`QMatroid`]:
//!
//! ```json
//! {"kind":"uniform","q":2,"n":3,"k":1}
//! {"kind":"representable","q":2,"ext":{"p":2,"m":3,"modulus":[1,1,0,1]},
//!  "G":[["1","0","w3"],["0","1","w"]]}
//! {"kind":"zdefined","q":2,"n":8,"flats":[{"rows":[[...]],"rank":0},...]}
//! {"kind":"spread","q":3,"spread":[{"rows":[[...],[...]]},...]}
//! {"kind":"dual","of":<spec>}
//! {"kind":"dsum","parts":[<spec>,...]}
//! {"kind":"restrict","of":<spec>,"X":{"rows":[...]}}
//! {"kind":"contract","of":<spec>,"X":{"rows":[...]}}
//! ```
//!
//! Matrix entries are written as powers of the extension generator ("0",
//! "1", "w5") so matrices can be transcribed digit-for-digit from their
//! printed form.

use serde::{Deserialize, Serialize};

use crate::census::{CensusReport, VerificationReport};
use crate::decompose::{Component, DecompositionReport, EquivalenceOutcome, SplitTree};
use crate::dsum::{direct_sum, SumStrategy};
use crate::field::create_field;
use crate::matroid::QMatroid;
use crate::subspace::Subspace;
use crate::zflats::{compute_zflats, CyclicFlatFamily};
use crate::{Budget, Error, Result};

// ---------------------------------------------------------------------------
// Matroid specs
// ---------------------------------------------------------------------------

/// Extension field description: GF(p^m), with an optional explicit modulus
/// (coefficient list of the defining polynomial, constant term first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtSpec {
    pub p: u64,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

/// A subspace given by spanning rows, with its assigned rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedRows {
    pub rows: Vec<Vec<u8>>,
    pub rank: u32,
}

/// A subspace given by spanning rows; field and ambient dimension come from
/// the surrounding spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rows {
    pub rows: Vec<Vec<u8>>,
}

/// Serializable description of a q-matroid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatroidSpec {
    Uniform {
        q: u32,
        n: u32,
        k: u32,
    },
    Representable {
        q: u32,
        ext: ExtSpec,
        #[serde(rename = "G")]
        g: Vec<Vec<String>>,
    },
    Zdefined {
        q: u32,
        n: u32,
        flats: Vec<RankedRows>,
    },
    Spread {
        q: u32,
        spread: Vec<Rows>,
    },
    Dual {
        of: Box<MatroidSpec>,
    },
    Dsum {
        parts: Vec<MatroidSpec>,
    },
    Restrict {
        of: Box<MatroidSpec>,
        #[serde(rename = "X")]
        x: Rows,
    },
    Contract {
        of: Box<MatroidSpec>,
        #[serde(rename = "X")]
        x: Rows,
    },
}

impl MatroidSpec {
    /// Ground field order of the described matroid.
    pub fn q(&self) -> u32 {
        match self {
            MatroidSpec::Uniform { q, .. }
            | MatroidSpec::Representable { q, .. }
            | MatroidSpec::Zdefined { q, .. }
            | MatroidSpec::Spread { q, .. } => *q,
            MatroidSpec::Dual { of } | MatroidSpec::Restrict { of, .. } | MatroidSpec::Contract { of, .. } => of.q(),
            MatroidSpec::Dsum { parts } => parts.first().map_or(0, MatroidSpec::q),
        }
    }

    /// Builds the described rank oracle. Direct sums use `strategy`; the
    /// budget bounds any cyclic-flat scans they trigger.
    pub fn build(&self, strategy: SumStrategy, budget: &Budget) -> Result<QMatroid> {
        match self {
            MatroidSpec::Uniform { q, n, k } => QMatroid::uniform(*q, *n, *k),
            MatroidSpec::Representable { q, ext, g } => {
                if *q as u64 != ext.p {
                    return Err(Error::BadSpec(format!(
                        "ground field GF({q}) does not match the extension characteristic {}",
                        ext.p
                    )));
                }
                let field = create_field(ext.p, ext.m, ext.modulus.as_deref())?;
                if g.is_empty() {
                    return Err(Error::BadSpec("generator matrix has no rows".into()));
                }
                let rows = g
                    .iter()
                    .map(|row| row.iter().map(|s| field.parse_element(s)).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
                let n = rows[0].len() as u32;
                QMatroid::from_representation(&field, n, &rows)
            }
            MatroidSpec::Zdefined { q, n, flats } => {
                let members = flats
                    .iter()
                    .map(|f| Ok((Subspace::span(*q, *n, &f.rows)?, f.rank)))
                    .collect::<Result<Vec<_>>>()?;
                QMatroid::from_cyclic_flats(*q, *n, &members)
            }
            MatroidSpec::Spread { q, spread } => {
                let members = spread
                    .iter()
                    .map(|s| Subspace::span(*q, 4, &s.rows))
                    .collect::<Result<Vec<_>>>()?;
                QMatroid::from_spread(*q, 4, &members)
            }
            MatroidSpec::Dual { of } => Ok(of.build(strategy, budget)?.dual()),
            MatroidSpec::Dsum { parts } => {
                let mut built = parts.iter().map(|p| p.build(strategy, budget));
                let Some(first) = built.next() else {
                    return Err(Error::BadSpec("dsum needs at least one part".into()));
                };
                built.try_fold(first?, |acc, next| direct_sum(&acc, &next?, strategy, budget))
            }
            MatroidSpec::Restrict { of, x } => {
                let m = of.build(strategy, budget)?;
                m.restriction(&Subspace::span(m.q(), m.n(), &x.rows)?)
            }
            MatroidSpec::Contract { of, x } => {
                let m = of.build(strategy, budget)?;
                m.contraction(&Subspace::span(m.q(), m.n(), &x.rows)?)
            }
        }
    }

    /// Canonical spec of an arbitrary oracle: its cyclic flats with ranks.
    pub fn from_matroid(m: &QMatroid, budget: &Budget) -> Result<MatroidSpec> {
        let family = compute_zflats(m, budget)?;
        Ok(MatroidSpec::Zdefined {
            q: m.q(),
            n: m.n(),
            flats: family
                .members()
                .iter()
                .map(|(z, r)| RankedRows { rows: z.basis_rows(), rank: *r })
                .collect(),
        })
    }

    pub fn from_json(s: &str) -> Result<MatroidSpec> {
        serde_json::from_str(s).map_err(|e| Error::BadSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs always serialize")
    }

    pub fn load(path: &std::path::Path) -> Result<MatroidSpec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        MatroidSpec::from_json(&text)
    }
}

// ---------------------------------------------------------------------------
// Subspace files
// ---------------------------------------------------------------------------

/// Standalone subspace file: `{"q":2,"n":4,"rows":[[1,0,0,0],[0,1,0,0]]}`.
/// Rows are canonicalized on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceSpec {
    pub q: u32,
    pub n: u32,
    pub rows: Vec<Vec<u8>>,
}

impl SubspaceSpec {
    pub fn build(&self) -> Result<Subspace> {
        Subspace::span(self.q, self.n, &self.rows)
    }

    pub fn of(s: &Subspace) -> SubspaceSpec {
        SubspaceSpec { q: s.q(), n: s.n(), rows: s.basis_rows() }
    }

    pub fn from_json(s: &str) -> Result<SubspaceSpec> {
        serde_json::from_str(s).map_err(|e| Error::BadSpec(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Report JSON forms
// ---------------------------------------------------------------------------

/// JSON form of a cyclic-flat family: members with ranks, plus the Hasse
/// cover edges as member-index pairs.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyDto {
    pub q: u32,
    pub n: u32,
    pub members: Vec<RankedRows>,
    pub covers: Vec<(usize, usize)>,
}

impl FamilyDto {
    pub fn of(f: &CyclicFlatFamily) -> FamilyDto {
        FamilyDto {
            q: f.q(),
            n: f.n(),
            members: f
                .members()
                .iter()
                .map(|(z, r)| RankedRows { rows: z.basis_rows(), rank: *r })
                .collect(),
            covers: f.covers().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentDto {
    pub ground_rows: Vec<Vec<u8>>,
    pub tag: String,
    pub label: String,
    pub spec: MatroidSpec,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeDto {
    Leaf { ground_rows: Vec<Vec<u8>>, tag: String, rank: u32 },
    SplitOff { trivial: Vec<TreeDto>, free: Vec<TreeDto>, core: Option<Box<TreeDto>> },
    Split { z1_rows: Vec<Vec<u8>>, z2_rows: Vec<Vec<u8>>, left: Box<TreeDto>, right: Box<TreeDto> },
}

impl TreeDto {
    fn of(tree: &SplitTree) -> TreeDto {
        match tree {
            SplitTree::Leaf { ground, tag, rank } => TreeDto::Leaf {
                ground_rows: ground.basis_rows(),
                tag: tag.as_str().into(),
                rank: *rank,
            },
            SplitTree::SplitOff { trivial, free, core } => TreeDto::SplitOff {
                trivial: trivial.iter().map(TreeDto::of).collect(),
                free: free.iter().map(TreeDto::of).collect(),
                core: core.as_ref().map(|c| Box::new(TreeDto::of(c))),
            },
            SplitTree::Split { z1, z2, left, right } => TreeDto::Split {
                z1_rows: z1.basis_rows(),
                z2_rows: z2.basis_rows(),
                left: Box::new(TreeDto::of(left)),
                right: Box::new(TreeDto::of(right)),
            },
        }
    }
}

/// JSON form of a decomposition, with each component exported as a
/// cyclic-flat spec in its own coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionDto {
    pub l: u32,
    pub f: u32,
    pub summary: String,
    pub components: Vec<ComponentDto>,
    pub tree: TreeDto,
}

impl DecompositionDto {
    pub fn of(report: &DecompositionReport, budget: &Budget) -> Result<DecompositionDto> {
        let component = |c: &Component| -> Result<ComponentDto> {
            Ok(ComponentDto {
                ground_rows: c.ground.basis_rows(),
                tag: c.tag.as_str().into(),
                label: c.label.clone(),
                spec: MatroidSpec::from_matroid(&c.oracle, budget)?,
            })
        };
        Ok(DecompositionDto {
            l: report.l,
            f: report.f,
            summary: report.summary(),
            components: report.components.iter().map(component).collect::<Result<Vec<_>>>()?,
            tree: TreeDto::of(&report.tree),
        })
    }
}

/// JSON form of an equivalence search outcome.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceDto {
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_rows: Option<Vec<Vec<u8>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates_exhausted: Option<u64>,
}

impl EquivalenceDto {
    pub fn of(outcome: &EquivalenceOutcome) -> EquivalenceDto {
        match outcome {
            EquivalenceOutcome::Found(alpha) => EquivalenceDto {
                found: true,
                alpha_rows: Some(alpha.rows()),
                candidates_exhausted: None,
            },
            EquivalenceOutcome::ExhaustedNone { candidates } => EquivalenceDto {
                found: false,
                alpha_rows: None,
                candidates_exhausted: Some(*candidates),
            },
        }
    }
}

/// JSON forms of reports already shaped for serialization.
pub fn census_json(report: &CensusReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn verification_json(report: &VerificationReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}
