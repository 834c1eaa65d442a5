use std::path::Path;

use serde::{Deserialize, Serialize};

use super::params::SimilarityMap;
use crate::error::{Error, Result};

/// Symmetric binary adjacency over `n` spatial units, zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    adj: Vec<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRow {
    area_a: usize,
    area_b: usize,
}

impl Adjacency {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut a = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                a.adj[i * n + j] = i != j;
            }
        }
        a
    }

    /// Complete graphs over consecutive blocks of the given sizes.
    pub fn block_diagonal(block_sizes: &[usize]) -> Self {
        let n = block_sizes.iter().sum();
        let mut a = Self::empty(n);
        let mut start = 0;
        for &b in block_sizes {
            for i in start..start + b {
                for j in start..start + b {
                    if i != j {
                        a.adj[i * n + j] = true;
                    }
                }
            }
            start += b;
        }
        a
    }

    /// Rook adjacency on a `rows x cols` lattice, items in row-major order.
    pub fn lattice(rows: usize, cols: usize) -> Self {
        let mut a = Self::empty(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let i = r * cols + c;
                if c + 1 < cols {
                    a.set(i, i + 1, true);
                }
                if r + 1 < rows {
                    a.set(i, i + cols, true);
                }
            }
        }
        a
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut a = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::invalid(format!(
                    "edge ({i}, {j}) references an item outside 0..{n}"
                )));
            }
            if i == j {
                return Err(Error::invalid(format!("self-loop on item {i}")));
            }
            a.set(i, j, true);
        }
        Ok(a)
    }

    /// Builds from a dense matrix, rejecting asymmetric input or a nonzero diagonal.
    pub fn from_matrix(n: usize, dense: &[bool]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::invalid("adjacency matrix has the wrong size"));
        }
        for i in 0..n {
            if dense[i * n + i] {
                return Err(Error::invalid(format!("nonzero diagonal at item {i}")));
            }
            for j in 0..i {
                if dense[i * n + j] != dense[j * n + i] {
                    return Err(Error::invalid(format!("asymmetric entry ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            n,
            adj: dense.to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i != j, "the diagonal of an adjacency is always zero");
        self.adj[i * self.n + j] = value;
        self.adj[j * self.n + i] = value;
    }

    /// Undirected edges with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.is_adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Pairwise similarity: 1 for adjacent units, `tau` otherwise.
    pub fn similarity(&self, i: usize, j: usize, tau: f64) -> f64 {
        if self.is_adjacent(i, j) {
            1.0
        } else {
            tau
        }
    }

    /// Reads an edge list with header `area_a,area_b` (0-based ids). Each row
    /// is an undirected edge; listing both directions is allowed.
    pub fn read_csv(path: &Path, n: usize) -> Result<Self> {
        let name = path.display().to_string();
        let mut rdr = csv::Reader::from_path(path).map_err(|source| Error::Csv {
            path: name.clone(),
            source,
        })?;
        let mut edges = Vec::new();
        for row in rdr.deserialize::<EdgeRow>() {
            let row = row.map_err(|source| Error::Csv {
                path: name.clone(),
                source,
            })?;
            edges.push((row.area_a, row.area_b));
        }
        Self::from_edges(n, &edges)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let name = path.display().to_string();
        let csv_err = |source| Error::Csv {
            path: name.clone(),
            source,
        };
        let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
        if self.edges().is_empty() {
            w.write_record(["area_a", "area_b"]).map_err(csv_err)?;
        }
        for (a, b) in self.edges() {
            w.serialize(EdgeRow { area_a: a, area_b: b }).map_err(csv_err)?;
        }
        w.flush().map_err(|source| Error::Io {
            path: name.clone(),
            source,
        })
    }
}

/// Dense matrix of transformed similarities `lambda(s_ii')` for a fixed `tau`.
#[derive(Debug, Clone)]
pub struct SimilarityWeights {
    n: usize,
    w: Vec<f64>,
}

impl SimilarityWeights {
    pub fn new(adj: &Adjacency, tau: f64, lambda: SimilarityMap) -> Self {
        let n = adj.n();
        let on = lambda.apply(1.0);
        let off = lambda.apply(tau);
        let w = adj.adj.iter().map(|&a| if a { on } else { off }).collect();
        Self { n, w }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.w[i * self.n..(i + 1) * self.n]
    }
}
