//! JSON scenario files: group, action, symbols and solver options.
//!
//! Angles are exact fractions of a full turn written as strings ("1/2" is
//! the half turn); decimal angles are rejected so that grid commensurability
//! stays decidable. Complex numbers are `[re, im]` pairs; a symbol entry is
//! a coefficient list of odd length centered at degree zero.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::angle::parse_turn;
use crate::error::{Error, Result};
use crate::geometry::{build_action, CopyMap, IsometryDescriptor, ModelManifold};
use crate::group::{build_group, FiniteGroup, GroupDescriptor, UnitaryRep};
use crate::linalg::{CMat, C64};
use crate::symbol::{BranchPair, GammaSymbolData, TrigMatrixSymbol, TrigPoly};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Product { factors: Vec<GroupSpec> },
    Table { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    fn to_descriptor(&self) -> Result<GroupDescriptor> {
        Ok(match self {
            GroupSpec::Cyclic { n } => GroupDescriptor::Cyclic(*n),
            GroupSpec::Dihedral { n } => GroupDescriptor::Dihedral(*n),
            GroupSpec::Product { factors } => {
                if factors.len() < 2 {
                    return Err(Error::Validation {
                        path: "group.factors".into(),
                        message: "product needs at least two factors".into(),
                    });
                }
                let mut it = factors.iter();
                let mut acc = it.next().unwrap().to_descriptor()?;
                for f in it {
                    acc = GroupDescriptor::Product(Box::new(acc), Box::new(f.to_descriptor()?));
                }
                acc
            }
            GroupSpec::Table { table } => GroupDescriptor::Table(table.clone()),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub copies: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CopyMapSpec {
    pub angle: String,
    pub orientation: i8,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub element: usize,
    pub copy_perm: Vec<usize>,
    pub per_copy: Vec<CopyMapSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberGeneratorSpec {
    pub element: usize,
    /// row-major `k x k` matrix of `[re, im]` pairs
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default = "default_rank")]
    pub fiber_rank: usize,
    #[serde(default)]
    pub fiber_generators: Vec<FiberGeneratorSpec>,
}

fn default_rank() -> usize {
    1
}

/// `k x k` matrix of Fourier coefficient lists, one branch.
pub type BranchSpec = Vec<Vec<Vec<[f64; 2]>>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchPairSpec {
    pub plus: BranchSpec,
    pub minus: BranchSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_eps_inv")]
    pub eps_inv: f64,
    #[serde(default = "default_sizes")]
    pub oracle_sizes: Vec<usize>,
    #[serde(default = "default_eps_oracle")]
    pub eps_oracle: f64,
}

fn default_samples() -> usize {
    256
}
fn default_eps_inv() -> f64 {
    crate::analyzer::EPS_INVERTIBLE
}
fn default_sizes() -> Vec<usize> {
    vec![64, 128, 256, 512]
}
fn default_eps_oracle() -> f64 {
    1e-6
}

impl Default for OptionsSpec {
    fn default() -> Self {
        OptionsSpec {
            samples: default_samples(),
            seed: 0,
            eps_inv: default_eps_inv(),
            oracle_sizes: default_sizes(),
            eps_oracle: default_eps_oracle(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub group: GroupSpec,
    pub manifold: ManifoldSpec,
    pub action: ActionSpec,
    /// group element index (as a string key) -> per-copy branch pair
    pub symbols: BTreeMap<String, Vec<BranchPairSpec>>,
    #[serde(default)]
    pub options: OptionsSpec,
}

fn parse_complex(v: [f64; 2]) -> C64 {
    C64::new(v[0], v[1])
}

fn parse_branch(spec: &BranchSpec, rank: usize, path: &str) -> Result<Vec<Vec<TrigPoly>>> {
    if spec.len() != rank || spec.iter().any(|r| r.len() != rank) {
        return Err(Error::Validation {
            path: path.into(),
            message: format!("expected a {rank} x {rank} matrix of coefficient lists"),
        });
    }
    let mut out = Vec::with_capacity(rank);
    for (i, row) in spec.iter().enumerate() {
        let mut orow = Vec::with_capacity(rank);
        for (j, entry) in row.iter().enumerate() {
            let coeffs: Vec<C64> = entry.iter().map(|&c| parse_complex(c)).collect();
            let poly = TrigPoly::new(coeffs).map_err(|e| Error::Validation {
                path: format!("{path}[{i}][{j}]"),
                message: e.to_string(),
            })?;
            orow.push(poly);
        }
        out.push(orow);
    }
    Ok(out)
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization")
    }

    pub fn build(&self) -> Result<GammaSymbolData> {
        let group = build_group(&self.group.to_descriptor()?)?;
        if self.manifold.copies == 0 {
            return Err(Error::Validation {
                path: "manifold.copies".into(),
                message: "need at least one copy".into(),
            });
        }
        let manifold = ModelManifold::circles(self.manifold.copies);
        let generators = self.parse_generators(&group)?;
        let fiber_rep = self.parse_fiber_rep(&group)?;
        let action = build_action(group, manifold, &generators, fiber_rep)?;
        let rank = self.action.fiber_rank;
        let mut symbols = BTreeMap::new();
        for (key, branch_pairs) in &self.symbols {
            let gamma: usize = key.parse().map_err(|_| Error::Validation {
                path: format!("symbols[{key}]"),
                message: "key must be a group element index".into(),
            })?;
            if gamma >= action.group.order() {
                return Err(Error::Validation {
                    path: format!("symbols[{key}]"),
                    message: format!("index exceeds group order {}", action.group.order()),
                });
            }
            if branch_pairs.len() != self.manifold.copies {
                return Err(Error::Validation {
                    path: format!("symbols[{key}]"),
                    message: format!(
                        "expected one branch pair per copy ({}), got {}",
                        self.manifold.copies,
                        branch_pairs.len()
                    ),
                });
            }
            let mut copies = Vec::new();
            for (c, bp) in branch_pairs.iter().enumerate() {
                copies.push(BranchPair {
                    plus: parse_branch(&bp.plus, rank, &format!("symbols[{key}][{c}].plus"))?,
                    minus: parse_branch(&bp.minus, rank, &format!("symbols[{key}][{c}].minus"))?,
                });
            }
            symbols.insert(gamma, TrigMatrixSymbol::new(rank, copies)?);
        }
        GammaSymbolData::new(action, symbols)
    }

    fn parse_generators(&self, group: &FiniteGroup) -> Result<Vec<(usize, IsometryDescriptor)>> {
        let mut out = Vec::new();
        for (gi, gen) in self.action.generators.iter().enumerate() {
            if gen.element >= group.order() {
                return Err(Error::Validation {
                    path: format!("action.generators[{gi}].element"),
                    message: format!("index exceeds group order {}", group.order()),
                });
            }
            let per_copy = gen
                .per_copy
                .iter()
                .enumerate()
                .map(|(ci, cm)| {
                    let angle = parse_turn(&cm.angle).map_err(|e| Error::Validation {
                        path: format!("action.generators[{gi}].per_copy[{ci}].angle"),
                        message: e.to_string(),
                    })?;
                    if cm.orientation != 1 && cm.orientation != -1 {
                        return Err(Error::Validation {
                            path: format!("action.generators[{gi}].per_copy[{ci}].orientation"),
                            message: "must be 1 or -1".into(),
                        });
                    }
                    Ok(CopyMap { angle, orientation: cm.orientation })
                })
                .collect::<Result<Vec<_>>>()?;
            let desc = IsometryDescriptor { copy_perm: gen.copy_perm.clone(), per_copy };
            desc.validate(self.manifold.copies).map_err(|e| Error::Validation {
                path: format!("action.generators[{gi}]"),
                message: e.to_string(),
            })?;
            out.push((gen.element, desc));
        }
        Ok(out)
    }

    fn parse_fiber_rep(&self, group: &FiniteGroup) -> Result<UnitaryRep> {
        let k = self.action.fiber_rank;
        if k == 0 {
            return Err(Error::Validation {
                path: "action.fiber_rank".into(),
                message: "fiber rank must be positive".into(),
            });
        }
        if self.action.fiber_generators.is_empty() {
            return Ok(UnitaryRep::trivial(group, k));
        }
        let mut gens: Vec<(usize, CMat)> = Vec::new();
        for (gi, fg) in self.action.fiber_generators.iter().enumerate() {
            if fg.matrix.len() != k || fg.matrix.iter().any(|r| r.len() != k) {
                return Err(Error::Validation {
                    path: format!("action.fiber_generators[{gi}].matrix"),
                    message: format!("expected a {k} x {k} matrix"),
                });
            }
            let m = ndarray::Array2::from_shape_fn((k, k), |(i, j)| parse_complex(fg.matrix[i][j]));
            gens.push((fg.element, m));
        }
        UnitaryRep::from_generators(group, &gens)
    }
}

/// Hex SHA-256 of the scenario file bytes; pins reports to their input.
pub fn scenario_hash(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const ANTIPODAL: &str = r#"{
        "group": {"kind": "cyclic", "n": 2},
        "manifold": {"copies": 1},
        "action": {
            "generators": [
                {"element": 1, "copy_perm": [0],
                 "per_copy": [{"angle": "1/2", "orientation": 1}]}
            ]
        },
        "symbols": {
            "0": [{"plus": [[[[2.0, 0.0]]]], "minus": [[[[2.0, 0.0]]]]}],
            "1": [{"plus": [[[[1.0, 0.0]]]], "minus": [[[[1.0, 0.0]]]]}]
        }
    }"#;

    #[test]
    fn antipodal_scenario_round_trips() {
        let sc = Scenario::from_json(ANTIPODAL).unwrap();
        let data = sc.build().unwrap();
        assert_eq!(data.action.group.order(), 2);
        assert_eq!(data.fiber_rank(), 1);
        let back = Scenario::from_json(&sc.to_json()).unwrap();
        assert_eq!(back.build().unwrap().symbols.len(), 2);
    }

    #[test]
    fn decimal_angle_is_rejected_with_hint() {
        let text = ANTIPODAL.replace("\"1/2\"", "\"0.5\"");
        let sc = Scenario::from_json(&text).unwrap();
        let err = sc.build().unwrap_err().to_string();
        assert!(err.contains("angle"), "{err}");
        assert!(err.to_lowercase().contains("fraction"), "{err}");
    }

    #[test]
    fn even_coefficient_list_is_rejected() {
        let text = ANTIPODAL.replace("[[[[2.0, 0.0]]]]", "[[[[2.0, 0.0], [1.0, 0.0]]]]");
        let sc = Scenario::from_json(&text).unwrap();
        let err = sc.build().unwrap_err().to_string();
        assert!(err.contains("odd length"), "{err}");
    }

    #[test]
    fn bad_symbol_key_is_rejected() {
        let text = ANTIPODAL.replace("\"1\": [{\"plus\"", "\"7\": [{\"plus\"");
        let sc = Scenario::from_json(&text).unwrap();
        let err = sc.build().unwrap_err().to_string();
        assert!(err.contains("group order"), "{err}");
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = ANTIPODAL.replace("\"manifold\"", "\"extra\": 1, \"manifold\"");
        assert!(Scenario::from_json(&text).is_err());
    }

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        let h1 = scenario_hash(ANTIPODAL.as_bytes());
        let h2 = scenario_hash(ANTIPODAL.as_bytes());
        assert_eq!(h1, h2);
        assert_eq!(h1.len(), 64);
        assert_ne!(h1, scenario_hash(b"other"));
    }
}
