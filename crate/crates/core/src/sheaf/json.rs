//! Sheaf dump format: per point its label, dimension vector, differentials
//! and restrictions to each cover, matrices as sparse exact entries.

use super::{SheafComplex, Stalk};
use crate::error::{Error, Result};
use crate::fintop::{FacePoset, UpSet};
use crate::linalg::{Matrix, Q};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// (row, col, value)
    pub entries: Vec<(usize, usize, Q)>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> MatrixJson {
        let mut entries = Vec::with_capacity(m.nnz());
        for (c, col) in m.columns().iter().enumerate() {
            for (r, x) in col {
                entries.push((*r as usize, c, x.clone()));
            }
        }
        entries.sort_by_key(|e| (e.0, e.1));
        MatrixJson { rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        if let Some(e) = self.entries.iter().find(|e| e.0 >= self.rows || e.1 >= self.cols) {
            return Err(Error::Input(format!("entry ({}, {}) outside a {}x{} matrix", e.0, e.1, self.rows, self.cols)));
        }
        Ok(Matrix::from_triplets(self.rows, self.cols, self.entries.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverJson {
    pub to: String,
    pub maps: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StalkJson {
    pub point: String,
    pub dims: Vec<usize>,
    pub diffs: Vec<MatrixJson>,
    pub restrictions: Vec<CoverJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SheafJson {
    pub lo: i32,
    pub support: Vec<String>,
    pub stalks: Vec<StalkJson>,
}

impl SheafJson {
    pub fn from_sheaf(f: &SheafComplex) -> SheafJson {
        let p = f.poset();
        let stalks = (0..p.len())
            .map(|x| {
                let s = f.stalk_data(x);
                StalkJson {
                    point: p.label(x),
                    dims: s.dims().to_vec(),
                    diffs: s.diffs().iter().map(MatrixJson::from_matrix).collect(),
                    restrictions: p
                        .up_covers(x)
                        .iter()
                        .zip(s.res())
                        .map(|(&y, r)| CoverJson { to: p.label(y as usize), maps: r.iter().map(MatrixJson::from_matrix).collect() })
                        .collect(),
                }
            })
            .collect();
        SheafJson { lo: f.lo(), support: f.support().iter().map(|x| p.label(x)).collect(), stalks }
    }

    /// Rebuilds the sheaf on `poset`, matching points by label; the result
    /// is fully validated.
    pub fn to_sheaf(&self, poset: &Arc<FacePoset>) -> Result<SheafComplex> {
        let index: std::collections::HashMap<String, usize> = (0..poset.len()).map(|x| (poset.label(x), x)).collect();
        let find = |l: &str| index.get(l).copied().ok_or_else(|| Error::Input(format!("unknown point {l}")));
        let support = UpSet::from_points(poset, self.support.iter().map(|l| find(l)).collect::<Result<Vec<_>>>()?)?;
        let mut stalks: Vec<Option<Stalk>> = vec![None; poset.len()];
        for sj in &self.stalks {
            let x = find(&sj.point)?;
            let covers = poset.up_covers(x);
            if sj.restrictions.len() != covers.len() {
                return Err(Error::Input(format!("point {} needs {} restrictions", sj.point, covers.len())));
            }
            let mut res = vec![Vec::new(); covers.len()];
            for c in &sj.restrictions {
                let y = find(&c.to)?;
                let j = covers.iter().position(|&v| v as usize == y).ok_or_else(|| Error::Input(format!("{} does not cover {}", c.to, sj.point)))?;
                res[j] = c.maps.iter().map(|m| m.to_matrix()).collect::<Result<_>>()?;
            }
            let diffs = sj.diffs.iter().map(|m| m.to_matrix()).collect::<Result<_>>()?;
            stalks[x] = Some(Stalk::new(sj.dims.clone(), diffs, res));
        }
        let stalks = stalks
            .into_iter()
            .enumerate()
            .map(|(x, s)| s.ok_or_else(|| Error::Input(format!("missing stalk for {}", poset.label(x)))))
            .collect::<Result<Vec<_>>>()?;
        SheafComplex::new(poset, support, self.lo, stalks).map_err(|e| Error::Input(e.to_string()))
    }
}
