use nalgebra::DMatrix;

use super::measure::GaussianSpec;
use super::polynomial::WickPolynomial;
use crate::error::{Error, Result};

/// Largest number of vertices handled by the subset recursions.
const MAX_VERTICES: usize = 24;

/// A set of disjoint edges on vertices `0..n`, optionally with a block label
/// per vertex that forbids edges inside a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    n: usize,
    edges: Vec<(usize, usize)>,
    blocks: Option<Vec<usize>>,
}

impl Diagram {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, blocks: Option<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidPairing(format!("edge ({a},{b}) is invalid for {n} vertices")));
            }
            if seen[a] || seen[b] {
                return Err(Error::InvalidPairing(format!("edge ({a},{b}) reuses a vertex")));
            }
            seen[a] = true;
            seen[b] = true;
            norm.push((a.min(b), a.max(b)));
        }
        if let Some(bl) = &blocks {
            if bl.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: bl.len() });
            }
            if let Some(&(a, b)) = norm.iter().find(|&&(a, b)| bl[a] == bl[b]) {
                return Err(Error::InvalidPairing(format!("edge ({a},{b}) lies inside block {}", bl[a])));
            }
        }
        Ok(Self { n, edges: norm, blocks })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn blocks(&self) -> Option<&[usize]> {
        self.blocks.as_deref()
    }

    /// Number of edges.
    pub fn rank(&self) -> usize {
        self.edges.len()
    }

    /// Vertices not covered by an edge, ascending.
    pub fn unpaired(&self) -> Vec<usize> {
        let mut covered = vec![false; self.n];
        for &(a, b) in &self.edges {
            covered[a] = true;
            covered[b] = true;
        }
        (0..self.n).filter(|&v| !covered[v]).collect()
    }

    pub fn is_complete(&self) -> bool {
        2 * self.edges.len() == self.n
    }
}

/// All perfect matchings of `0..k`: the smallest unmatched vertex is paired
/// with each larger free vertex in ascending order. Empty for odd `k`;
/// `(k−1)!!` diagrams otherwise.
pub fn enumerate_pairings(k: usize) -> Vec<Diagram> {
    enumerate_matchings(&vec![0; k], false)
}

/// Complete diagrams on blocks of the given sizes with no edge inside a block.
/// Vertices are numbered block by block.
pub fn enumerate_generalized_pairings(block_sizes: &[usize]) -> Vec<Diagram> {
    let labels: Vec<usize> = block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect();
    enumerate_matchings(&labels, true)
}

fn enumerate_matchings(labels: &[usize], respect_blocks: bool) -> Vec<Diagram> {
    let k = labels.len();
    let mut out = Vec::new();
    if k % 2 == 1 {
        return out;
    }
    let mut used = vec![false; k];
    let mut edges = Vec::with_capacity(k / 2);
    fn rec(
        labels: &[usize],
        respect: bool,
        used: &mut [bool],
        edges: &mut Vec<(usize, usize)>,
        out: &mut Vec<Diagram>,
    ) {
        let Some(i) = used.iter().position(|u| !u) else {
            out.push(Diagram {
                n: labels.len(),
                edges: edges.clone(),
                blocks: respect.then(|| labels.to_vec()),
            });
            return;
        };
        used[i] = true;
        for j in i + 1..labels.len() {
            if used[j] || (respect && labels[i] == labels[j]) {
                continue;
            }
            used[j] = true;
            edges.push((i, j));
            rec(labels, respect, used, edges, out);
            edges.pop();
            used[j] = false;
        }
        used[i] = false;
    }
    rec(labels, respect_blocks, &mut used, &mut edges, &mut out);
    out
}

/// `Σ_{perfect matchings} Π q(i, j)` (the hafnian of `q`), by recursion over
/// subsets: pair the smallest remaining vertex with each other one.
pub fn pairing_sum(q: &DMatrix<f64>) -> f64 {
    constrained_pairing_sum(q, None)
}

fn constrained_pairing_sum(q: &DMatrix<f64>, labels: Option<&[usize]>) -> f64 {
    let k = q.nrows();
    if k % 2 == 1 {
        return 0.0;
    }
    if k == 0 {
        return 1.0;
    }
    assert!(k <= MAX_VERTICES, "pairing sums are limited to {MAX_VERTICES} vertices");
    let full = (1usize << k) - 1;
    let mut memo = vec![f64::NAN; 1 << k];
    memo[0] = 1.0;
    fn rec(mask: usize, q: &DMatrix<f64>, labels: Option<&[usize]>, memo: &mut [f64]) -> f64 {
        if !memo[mask].is_nan() {
            return memo[mask];
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut s = 0.0;
        let mut m = rest;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            if labels.is_some_and(|l| l[i] == l[j]) {
                continue;
            }
            let w = q[(i, j)];
            if w != 0.0 {
                s += w * rec(rest & !(1 << j), q, labels, memo);
            }
        }
        memo[mask] = s;
        s
    }
    rec(full, q, labels, &mut memo)
}

fn vertex_limit(k: usize) -> Result<()> {
    if k > MAX_VERTICES {
        return Err(Error::Unsupported(format!("at most {MAX_VERTICES} factors supported, got {k}")));
    }
    Ok(())
}

/// `E[Π ⟨uᵢ, X⟩]` for a centred Gaussian: the sum over perfect matchings of
/// `Π ⟨Σuᵢ, uⱼ⟩`, zero for an odd number of factors.
pub fn moment_wick(spec: &GaussianSpec, us: &[Vec<f64>]) -> Result<f64> {
    if !spec.is_centered() {
        return Err(Error::InvalidInput("Wick's theorem applies to centred Gaussians".into()));
    }
    vertex_limit(us.len())?;
    Ok(pairing_sum(&spec.pairing_matrix(us)?))
}

/// Value of a diagram: the product of `q(fᵢ, fⱼ)` over its edges times the
/// ordinary monomial of the generators at unpaired vertices.
///
/// Vertex `v` carries generator `which[v]`; `q` is the pairing matrix of the
/// generators. Complete diagrams give constants.
pub fn eval_diagram(d: &Diagram, q: &DMatrix<f64>, which: &[usize]) -> Result<WickPolynomial> {
    if which.len() != d.n {
        return Err(Error::InconsistentLabels(format!(
            "{} labels given for {} vertices",
            which.len(),
            d.n
        )));
    }
    if let Some(&bad) = which.iter().find(|&&g| g >= q.nrows()) {
        return Err(Error::InconsistentLabels(format!(
            "label {bad} exceeds the {} available generators",
            q.nrows()
        )));
    }
    let value: f64 = d.edges.iter().map(|&(a, b)| q[(which[a], which[b])]).product();
    let mut exps = vec![0u32; q.nrows()];
    for v in d.unpaired() {
        exps[which[v]] += 1;
    }
    WickPolynomial::monomial(q.clone(), exps, value)
}

/// `E[Π_b :Π_{f∈block b} f:]`: the sum over complete diagrams without edges
/// inside a block of the product of edge pairings.
///
/// `blocks` lists generator indices into the pairing matrix `q`.
pub fn generalized_wick_expectation(q: &DMatrix<f64>, blocks: &[Vec<usize>]) -> Result<f64> {
    if blocks.is_empty() {
        return Err(Error::InvalidInput("need at least one block".into()));
    }
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        for &g in block {
            if g >= q.nrows() {
                return Err(Error::InconsistentLabels(format!("generator {g} out of range")));
            }
            gens.push(g);
            labels.push(b);
        }
    }
    vertex_limit(gens.len())?;
    let qv = DMatrix::from_fn(gens.len(), gens.len(), |i, j| q[(gens[i], gens[j])]);
    Ok(constrained_pairing_sum(&qv, Some(&labels)))
}

/// [`generalized_wick_expectation`] for blocks of vectors under `spec`.
pub fn generalized_wick_expectation_vectors(spec: &GaussianSpec, blocks: &[Vec<Vec<f64>>]) -> Result<f64> {
    if !spec.is_centered() {
        return Err(Error::InvalidInput("Wick's theorem applies to centred Gaussians".into()));
    }
    let all: Vec<Vec<f64>> = blocks.iter().flatten().cloned().collect();
    let q = spec.pairing_matrix(&all)?;
    let mut idx = 0;
    let index_blocks: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            let r = (idx..idx + b.len()).collect();
            idx += b.len();
            r
        })
        .collect();
    generalized_wick_expectation(&q, &index_blocks)
}
