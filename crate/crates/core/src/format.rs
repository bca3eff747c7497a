//! File formats shared by the command line and the examples.
//!
//! All JSON field names are camelCase. Atoms and generators are numbered from 1
//! in files (`x1`, `v2`, subring blocks `[[1, 2], [3]]`); dg-algebra basis
//! indices are numbered from 0 within each degree.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::algebra::{CoefficientPair, Subring};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::hochschild::{Cochain, HhReport, KoszulCochains};
use crate::koszul::AdmissibleSequence;
use crate::massey::{DgAlgebra, DgElement};

/// `{vDim, atoms, subringBlocks?}`. Without blocks the subring is the whole
/// ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AlgebraSpec {
    pub v_dim: usize,
    pub atoms: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subring_blocks: Option<Vec<Vec<usize>>>,
}

impl AlgebraSpec {
    pub fn diagonal(v_dim: usize, atoms: usize) -> Self {
        Self {
            v_dim,
            atoms,
            subring_blocks: None,
        }
    }

    pub fn from_pair(pair: &CoefficientPair) -> Self {
        let sub = pair.subring();
        Self {
            v_dim: pair.v_dim(),
            atoms: sub.ambient_atoms(),
            subring_blocks: (!sub.is_full()).then(|| {
                sub.blocks()
                    .iter()
                    .map(|b| b.iter().map(|a| a + 1).collect())
                    .collect()
            }),
        }
    }

    pub fn pair(&self) -> Result<CoefficientPair> {
        let subring = match &self.subring_blocks {
            None => Subring::full(self.atoms),
            Some(blocks) => {
                let zero_based = blocks
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(|&a| {
                                a.checked_sub(1)
                                    .ok_or_else(|| Error::Parse("atoms are numbered from 1".into()))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Subring::from_blocks(self.atoms, zero_based)?
            }
        };
        Ok(CoefficientPair::new(self.v_dim, subring))
    }
}

/// Parses blocks written as `1,2;3`.
pub fn parse_blocks(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split(';')
        .map(|block| {
            block
                .split(',')
                .map(|a| {
                    a.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad atom {a:?} in {s:?}")))
                })
                .collect()
        })
        .collect()
}

/// Provenance of a report. Re-running with the same parameters and seed gives
/// the same numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub versions: BTreeMap<String, String>,
    /// Only recorded on request, so that reports stay byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, seed: Option<u64>) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert(
            env!("CARGO_PKG_NAME").to_string(),
            env!("CARGO_PKG_VERSION").to_string(),
        );
        Self {
            command: command.into(),
            parameters,
            seed,
            versions,
            wall_time_ms: None,
            summary: serde_json::Value::Null,
        }
    }
}

/// The `hh-grid` report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub manifest: RunManifest,
    pub algebra: AlgebraSpec,
    pub results: Vec<HhReport>,
}

pub const CSV_HEADER: &str = "k,s,cochains,cocycles,coboundaries,hh";

/// Writes grid cells as CSV with the fixed header.
pub fn write_csv(results: &[HhReport], out: impl Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))
        .map_err(|e| Error::Io(e.into()))?;
    for r in results {
        w.serialize(r).map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(input: impl std::io::Read) -> Result<Vec<HhReport>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

/// A cochain on admissible sequences: keys are comma-separated generator
/// names (`"x1,v1,x2"`, the empty string for `k = 0`), values are bit strings
/// over the basis of `M_{k+s}`. Missing sequences have value zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CochainFile {
    pub algebra: AlgebraSpec,
    pub k: usize,
    pub s: i64,
    pub values: BTreeMap<String, String>,
}

impl CochainFile {
    pub fn from_cochain(c: &KoszulCochains, f: &Cochain) -> Self {
        let q = c.pair().q();
        let values = c
            .basis(f.k)
            .sequences()
            .iter()
            .zip(&f.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(t, v)| (sequence_key(&q, t), v.to_string()))
            .collect();
        Self {
            algebra: AlgebraSpec::from_pair(c.pair()),
            k: f.k,
            s: f.s,
            values,
        }
    }

    /// Reads the values against a cochain space for the same pair.
    pub fn to_cochain(&self, c: &KoszulCochains) -> Result<Cochain> {
        let q = c.pair().q();
        let mut f = c.zero(self.k, self.s);
        let t = c.target_dim(self.k, self.s);
        for (key, bits) in &self.values {
            let names: Vec<String> = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',').map(|s| s.trim().to_string()).collect()
            };
            let seq = AdmissibleSequence::parse(&q, &names)?;
            if seq.len() != self.k {
                return Err(Error::Parse(format!(
                    "sequence {key:?} does not have length {}",
                    self.k
                )));
            }
            let idx = c
                .basis(self.k)
                .index_of(&seq)
                .ok_or_else(|| Error::Parse(format!("sequence {key:?} is not admissible")))?;
            let v: BitVector = bits.parse()?;
            if v.len() != t {
                return Err(Error::Parse(format!(
                    "value {bits:?} at {key:?} needs {t} coefficients"
                )));
            }
            f.values[idx].xor_assign(&v);
        }
        Ok(f)
    }
}

pub fn sequence_key(q: &crate::algebra::ConnectedSumAlgebra, t: &AdmissibleSequence) -> String {
    t.generators(q)
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// A finite dg-algebra: per-degree dimensions, the differential out of each
/// degree as `0`/`1` row strings (`dims[d+1]` rows of length `dims[d]`), and
/// the nonzero products of basis elements keyed `"d:i*e:j"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DgAlgebraFile {
    pub top_degree: usize,
    pub dims: Vec<usize>,
    /// Coefficients of the unit in degree 0; defaults to the first basis vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub differential: Vec<Vec<String>>,
    pub multiplication: BTreeMap<String, String>,
}

impl DgAlgebraFile {
    pub fn from_algebra(alg: &DgAlgebra) -> Self {
        let top = alg.top();
        let differential = (0..=top)
            .map(|d| {
                let m = alg.differential(d);
                m.row_vectors().iter().map(|r| r.to_string()).collect()
            })
            .collect();
        let mut multiplication = BTreeMap::new();
        for d1 in 0..=top {
            for d2 in 0..=top - d1 {
                for i in 0..alg.dim(d1) {
                    for j in 0..alg.dim(d2) {
                        let p = alg.product_basis(d1, i, d2, j);
                        if !p.is_zero() {
                            multiplication.insert(format!("{d1}:{i}*{d2}:{j}"), p.to_string());
                        }
                    }
                }
            }
        }
        let unit = alg.unit().coeffs;
        Self {
            top_degree: top,
            dims: alg.dims().to_vec(),
            unit: (unit != BitVector::unit(alg.dim(0), 0)).then(|| unit.to_string()),
            differential,
            multiplication,
        }
    }

    pub fn to_algebra(&self) -> Result<DgAlgebra> {
        if self.dims.len() != self.top_degree + 1 {
            return Err(Error::Parse(format!(
                "{} dimensions for top degree {}",
                self.dims.len(),
                self.top_degree
            )));
        }
        if self.differential.len() != self.dims.len() {
            return Err(Error::Parse("one differential per degree expected".into()));
        }
        let dim = |d: usize| self.dims.get(d).copied().unwrap_or(0);
        let diff = self
            .differential
            .iter()
            .enumerate()
            .map(|(d, rows)| {
                if rows.len() != dim(d + 1) {
                    return Err(Error::Parse(format!(
                        "differential of degree {d} needs {} rows",
                        dim(d + 1)
                    )));
                }
                BitMatrix::from_row_strings(self.dims[d], rows)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut products = BTreeMap::new();
        for (key, bits) in &self.multiplication {
            let bad = || Error::Parse(format!("bad product key {key:?}, expected \"d:i*e:j\""));
            let (a, b) = key.split_once('*').ok_or_else(bad)?;
            let parse = |s: &str| -> Result<(usize, usize)> {
                let (d, i) = s.trim().split_once(':').ok_or_else(bad)?;
                Ok((d.parse().map_err(|_| bad())?, i.parse().map_err(|_| bad())?))
            };
            let ((d1, i), (d2, j)) = (parse(a)?, parse(b)?);
            products.insert((d1, i, d2, j), bits.parse::<BitVector>()?);
        }
        let unit = match &self.unit {
            Some(u) => u.parse()?,
            None => BitVector::unit(self.dims.first().copied().unwrap_or(0).max(1), 0),
        };
        DgAlgebra::new(self.dims.clone(), unit, diff, &products)
    }
}

/// Parses a homogeneous element written `d:bits`.
pub fn parse_element(alg: &DgAlgebra, s: &str) -> Result<DgElement> {
    let (d, bits) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected degree:bits, got {s:?}")))?;
    let d: usize = d
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad degree in {s:?}")))?;
    alg.element(d, bits.trim().parse()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ConnectedSumAlgebra;
    use crate::koszul::Caps;

    #[test]
    fn algebra_spec_round_trip() {
        let spec = AlgebraSpec {
            v_dim: 1,
            atoms: 3,
            subring_blocks: Some(vec![vec![1, 3], vec![2]]),
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"vDim":1,"atoms":3,"subringBlocks":[[1,3],[2]]}"#);
        let pair = spec.pair().unwrap();
        assert_eq!(AlgebraSpec::from_pair(&pair), spec);
        assert_eq!(parse_blocks("1,3;2").unwrap(), vec![vec![1, 3], vec![2]]);
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![HhReport {
            k: 3,
            s: -1,
            cochains: 36,
            cocycles: 12,
            coboundaries: 12,
            hh: 0,
        }];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "k,s,cochains,cocycles,coboundaries,hh\n3,-1,36,12,12,0\n"
        );
        assert_eq!(read_csv(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn cochain_file_round_trip() {
        let c = KoszulCochains::new(CoefficientPair::diagonal(1, 2), 3, &Caps::default()).unwrap();
        let f = c.cocycle_basis(2, 0).remove(0);
        let file = CochainFile::from_cochain(&c, &f);
        let json = serde_json::to_string(&file).unwrap();
        let back: CochainFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_cochain(&c).unwrap(), f);
    }

    #[test]
    fn dg_algebra_file_round_trip() {
        let alg = DgAlgebra::from_connected_sum(&ConnectedSumAlgebra::new(1, 2), 3);
        let file = DgAlgebraFile::from_algebra(&alg);
        assert_eq!(file.multiplication["1:1*1:1"], "10");
        let json = serde_json::to_string_pretty(&file).unwrap();
        let back: DgAlgebraFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_algebra().unwrap(), alg);
    }
}
