//! JSON workspaces: a named collection of curves, coverings and bundles in
//! one file.
//!
//! The on-disk layout is canonical: top-level keys `curves`, `coverings`,
//! `bundles`, each sorted by name; fiber and above lists keep their stored
//! order because monodromy entries correspond to them positionally; weight
//! tables carry nonzero weights only and are padded back to full rank on
//! load. Rationals are written `"p/q"` in lowest terms. Saving a loaded
//! canonical file reproduces it byte for byte, and every covering and bundle
//! is fully re-validated on load.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bundle::{BundleLocal, GradedPiece, ParabolicBundle, SemistableAtom};
use crate::covering::{CoveringMap, FiberProfile, RamifiedPoint};
use crate::curve::{MarkedCurve, PointId};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::Rat;
use crate::weights::WeightMultiset;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkspaceDoc {
    #[serde(default)]
    curves: Vec<CurveDoc>,
    #[serde(default)]
    coverings: Vec<CoveringDoc>,
    #[serde(default)]
    bundles: Vec<BundleDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    name: String,
    genus: u32,
    points: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoveringDoc {
    name: String,
    source: String,
    target: String,
    degree: u64,
    fibers: Vec<FiberDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    monodromy: Option<Vec<Vec<u64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberDoc {
    base: String,
    above: Vec<AboveDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AboveDoc {
    point: String,
    e: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleDoc {
    name: String,
    curve: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    atoms: Option<Vec<AtomDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pieces: Option<Vec<PieceDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    local: Option<LocalDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomDoc {
    rank: u64,
    degree: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    weights: BTreeMap<String, Vec<WeightDoc>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceDoc {
    rank: u64,
    par_degree: Rat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LocalDoc {
    degree: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    weights: BTreeMap<String, Vec<WeightDoc>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightDoc {
    w: Rat,
    m: u64,
}

fn weights_to_doc<'a>(
    entries: impl Iterator<Item = (&'a PointId, &'a WeightMultiset)>,
) -> BTreeMap<String, Vec<WeightDoc>> {
    let mut out = BTreeMap::new();
    for (p, ws) in entries {
        let nonzero: Vec<WeightDoc> = ws
            .entries()
            .iter()
            .filter(|(w, _)| !w.is_zero())
            .map(|(w, m)| WeightDoc { w: w.clone(), m: *m })
            .collect();
        if !nonzero.is_empty() {
            out.insert(p.to_string(), nonzero);
        }
    }
    out
}

fn weights_from_doc(
    rank: u64,
    doc: &BTreeMap<String, Vec<WeightDoc>>,
) -> Result<BTreeMap<PointId, WeightMultiset>> {
    let mut out = BTreeMap::new();
    for (p, entries) in doc {
        let ws = WeightMultiset::new(entries.iter().map(|d| (d.w.clone(), d.m)))?;
        let total = ws.total_multiplicity();
        if total > rank {
            return Err(Error::MultiplicityMismatch {
                point: p.clone(),
                total,
                rank,
            });
        }
        out.insert(PointId::from(p.as_str()), ws.padded(rank));
    }
    Ok(out)
}

/// A named collection of curves, coverings and bundles with cross-checked
/// references. Inserting a covering or bundle auto-registers the curves it
/// carries; a name can only be re-registered with an identical value.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Workspace {
    curves: BTreeMap<String, MarkedCurve>,
    coverings: BTreeMap<String, CoveringMap>,
    bundles: BTreeMap<String, ParabolicBundle>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_curve(&mut self, curve: MarkedCurve) -> Result<()> {
        match self.curves.get(curve.name()) {
            None => {
                self.curves.insert(curve.name().to_string(), curve);
                Ok(())
            }
            Some(existing) if *existing == curve => Ok(()),
            Some(_) => Err(Error::DuplicateName {
                kind: "curve",
                name: curve.name().to_string(),
            }),
        }
    }

    pub fn insert_covering(&mut self, name: impl Into<String>, covering: CoveringMap) -> Result<()> {
        let name = name.into();
        if self.coverings.contains_key(&name) {
            return Err(Error::DuplicateName {
                kind: "covering",
                name,
            });
        }
        self.insert_curve(covering.source().clone())?;
        self.insert_curve(covering.target().clone())?;
        self.coverings.insert(name, covering);
        Ok(())
    }

    pub fn insert_bundle(&mut self, name: impl Into<String>, bundle: ParabolicBundle) -> Result<()> {
        let name = name.into();
        if self.bundles.contains_key(&name) {
            return Err(Error::DuplicateName {
                kind: "bundle",
                name,
            });
        }
        self.insert_curve(bundle.curve().clone())?;
        self.bundles.insert(name, bundle);
        Ok(())
    }

    pub fn curve(&self, name: &str) -> Result<&MarkedCurve> {
        self.curves.get(name).ok_or_else(|| Error::MissingName {
            kind: "curve",
            name: name.to_string(),
        })
    }

    pub fn covering(&self, name: &str) -> Result<&CoveringMap> {
        self.coverings.get(name).ok_or_else(|| Error::MissingName {
            kind: "covering",
            name: name.to_string(),
        })
    }

    pub fn bundle(&self, name: &str) -> Result<&ParabolicBundle> {
        self.bundles.get(name).ok_or_else(|| Error::MissingName {
            kind: "bundle",
            name: name.to_string(),
        })
    }

    pub fn curves(&self) -> impl Iterator<Item = &MarkedCurve> {
        self.curves.values()
    }

    pub fn coverings(&self) -> impl Iterator<Item = (&str, &CoveringMap)> {
        self.coverings.iter().map(|(n, c)| (n.as_str(), c))
    }

    pub fn bundles(&self) -> impl Iterator<Item = (&str, &ParabolicBundle)> {
        self.bundles.iter().map(|(n, b)| (n.as_str(), b))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: WorkspaceDoc = serde_json::from_str(text)?;
        let mut ws = Workspace::new();
        for c in doc.curves {
            let curve = MarkedCurve::new(c.name, c.genus, c.points.into_iter().map(PointId::from))?;
            ws.insert_curve(curve)?;
        }
        for c in doc.coverings {
            let source = ws.curve(&c.source)?.clone();
            let target = ws.curve(&c.target)?.clone();
            let fibers = c
                .fibers
                .into_iter()
                .map(|f| {
                    FiberProfile::new(
                        PointId::from(f.base),
                        f.above
                            .into_iter()
                            .map(|a| RamifiedPoint {
                                point: PointId::from(a.point),
                                e: a.e,
                            })
                            .collect(),
                    )
                })
                .collect();
            let monodromy = match c.monodromy {
                None => None,
                Some(perms) => Some(
                    perms
                        .iter()
                        .map(|p| Permutation::from_one_indexed(p))
                        .collect::<Result<Vec<_>>>()?,
                ),
            };
            let covering = CoveringMap::new(source, target, c.degree, fibers, monodromy)?;
            ws.insert_covering(c.name, covering)?;
        }
        for b in doc.bundles {
            let curve = ws.curve(&b.curve)?.clone();
            let bundle = match (b.atoms, b.pieces) {
                (Some(atoms), None) => {
                    if b.local.is_some() {
                        return Err(Error::BadBundleData {
                            name: b.name,
                            detail: "local data belongs to the pieces form",
                        });
                    }
                    let atoms = atoms
                        .into_iter()
                        .map(|a| {
                            let weights = weights_from_doc(a.rank, &a.weights)?;
                            SemistableAtom::new(a.rank, a.degree, weights)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    ParabolicBundle::from_atoms(curve, atoms)?
                }
                (None, Some(pieces)) => {
                    let pieces = pieces
                        .into_iter()
                        .map(|p| GradedPiece::new(p.rank, p.par_degree))
                        .collect::<Result<Vec<_>>>()?;
                    match b.local {
                        None => ParabolicBundle::from_graded(curve, pieces)?,
                        Some(local) => {
                            let rank = pieces.iter().map(GradedPiece::rank).sum();
                            let weights = weights_from_doc(rank, &local.weights)?;
                            ParabolicBundle::from_graded_with_local(
                                curve,
                                pieces,
                                BundleLocal::new(local.degree, weights),
                            )?
                        }
                    }
                }
                _ => {
                    return Err(Error::BadBundleData {
                        name: b.name,
                        detail: "needs exactly one of atoms or pieces",
                    })
                }
            };
            ws.insert_bundle(b.name, bundle)?;
        }
        Ok(ws)
    }

    pub fn to_json(&self) -> String {
        let curves = self
            .curves
            .values()
            .map(|c| CurveDoc {
                name: c.name().to_string(),
                genus: c.genus(),
                points: c.points().map(|p| p.to_string()).collect(),
            })
            .collect();
        let coverings = self
            .coverings
            .iter()
            .map(|(name, c)| CoveringDoc {
                name: name.clone(),
                source: c.source().name().to_string(),
                target: c.target().name().to_string(),
                degree: c.degree(),
                fibers: c
                    .fibers()
                    .iter()
                    .map(|f| FiberDoc {
                        base: f.base().to_string(),
                        above: f
                            .above()
                            .iter()
                            .map(|a| AboveDoc {
                                point: a.point.to_string(),
                                e: a.e,
                            })
                            .collect(),
                    })
                    .collect(),
                monodromy: c
                    .monodromy()
                    .map(|perms| perms.iter().map(Permutation::one_indexed).collect()),
            })
            .collect();
        let bundles = self
            .bundles
            .iter()
            .map(|(name, b)| {
                let (atoms, pieces, local) = match b.atoms() {
                    Some(atoms) => (
                        Some(
                            atoms
                                .iter()
                                .map(|a| AtomDoc {
                                    rank: a.rank(),
                                    degree: a.degree(),
                                    weights: weights_to_doc(a.local().iter()),
                                })
                                .collect(),
                        ),
                        None,
                        None,
                    ),
                    None => {
                        let pieces = b
                            .stored_pieces()
                            .expect("graded bundles expose their pieces")
                            .iter()
                            .map(|g| PieceDoc {
                                rank: g.rank(),
                                par_degree: g.par_degree().clone(),
                            })
                            .collect();
                        let local = b.bundle_local().map(|l| LocalDoc {
                            degree: l.degree(),
                            weights: weights_to_doc(l.weights().iter()),
                        });
                        (None, Some(pieces), local)
                    }
                };
                BundleDoc {
                    name: name.clone(),
                    curve: b.curve().name().to_string(),
                    atoms,
                    pieces,
                    local,
                }
            })
            .collect();
        let doc = WorkspaceDoc {
            curves,
            coverings,
            bundles,
        };
        let mut text =
            serde_json::to_string_pretty(&doc).expect("workspace serialization cannot fail");
        text.push('\n');
        text
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
