//! Per-frequency analysis of sub-lattice sampling.
//!
//! Sampling `(Aˢf)(mj + c)` and taking length-`M` DFTs of the subsampled
//! rows turns the problem into one small linear system per frequency. For a
//! frequency `ω` the unknowns are the aliased values `f̂((ω + j)/m)`,
//! `j = 0, …, m-1`, and the system matrix has rows indexed by `(c, s)`:
//!
//! ```text
//!     row (c, s), column j  =  e^{+i2πcj/m} · â((ω + j)/m)^s
//! ```
//!
//! In a periodic model of period `P = mM`, with `F` the period-`P` DFT of
//! `f`, `ω = k/M` and `Y_{c,s}` the length-`M` DFT of `j ↦ (Aˢf)(mj + c)`,
//!
//! ```text
//!     Σ_j row(c, s)_j · F(k + jM)  =  m · e^{-i2πcω/m} · Y_{c,s}(k).
//! ```
//!
//! The node powers are not conjugated because samples are taken forward,
//! as `(Aˢf)(λ)`. The conjugated variant belongs to the adjoint kernel, see
//! [`Kernel::adjoint`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::signal::{cis_turns, symbol, Frequency, FrequencyGrid, Kernel};

/// Relative rank threshold: `σ_min <= 1e-8 · σ_max` counts as singular.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// The node family `â((ω + j)/m)`, `j = 0, …, m-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeVector {
    omega: Frequency,
    nodes: Vec<Complex64>,
}

impl NodeVector {
    pub fn from_values(omega: impl Into<Frequency>, nodes: Vec<Complex64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("node vector needs m >= 1".into()));
        }
        Ok(NodeVector {
            omega: omega.into(),
            nodes,
        })
    }

    pub fn omega(&self) -> Frequency {
        self.omega
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn m(&self) -> usize {
        self.nodes.len()
    }
}

pub fn nodes(kernel: &Kernel, m: u64, omega: impl Into<Frequency>) -> Result<NodeVector> {
    if m == 0 {
        return Err(Error::InvalidArgument("nodes need m >= 1".into()));
    }
    let omega = omega.into();
    let values = (0..m).map(|j| symbol(kernel, omega.alias(j, m))).collect();
    NodeVector::from_values(omega, values)
}

/// The `(N·L) × m` stacked system at one frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct StackedSystem {
    omega: Frequency,
    offsets: Vec<u64>,
    n_steps: u32,
    matrix: DMatrix<Complex64>,
}

impl StackedSystem {
    /// Blocks follow `offsets` in order, rows within a block run over `s`.
    pub fn from_nodes(nv: &NodeVector, offsets: &[u64], n_steps: u32) -> Self {
        let m = nv.m() as u64;
        let rows = offsets.len() * n_steps as usize;
        let mut matrix = DMatrix::zeros(rows, m as usize);
        for (b, &c) in offsets.iter().enumerate() {
            for (j, &node) in nv.nodes().iter().enumerate() {
                // e^{+i2πcj/m}, reduced exactly.
                let r = (m - (c * j as u64) % m) % m;
                let phase = cis_turns(r as f64 / m as f64);
                let mut p = phase;
                for s in 0..n_steps as usize {
                    matrix[(b * n_steps as usize + s, j)] = p;
                    p *= node;
                }
            }
        }
        StackedSystem {
            omega: nv.omega(),
            offsets: offsets.to_vec(),
            n_steps,
            matrix,
        }
    }

    pub fn omega(&self) -> Frequency {
        self.omega
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn n_steps(&self) -> u32 {
        self.n_steps
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn singular_values(&self) -> Vec<f64> {
        linalg::singular_values(&self.matrix)
    }
}

fn check_dims(m: u64, l: u64, n_steps: u32) -> Result<()> {
    if m == 0 || l == 0 || l > m {
        return Err(Error::Dimension(format!("need 1 <= L <= m, got m = {m}, L = {l}")));
    }
    if n_steps == 0 {
        return Err(Error::Dimension("need N >= 1".into()));
    }
    Ok(())
}

/// Stacked system for `Λ = mℤ + {0, …, L-1}` and `N` time steps.
pub fn build_system(kernel: &Kernel, m: u64, l: u64, n_steps: u32, omega: impl Into<Frequency>) -> Result<StackedSystem> {
    check_dims(m, l, n_steps)?;
    let nv = nodes(kernel, m, omega)?;
    let offsets: Vec<u64> = (0..l).collect();
    Ok(StackedSystem::from_nodes(&nv, &offsets, n_steps))
}

/// Default coincidence tolerance for a node family, `1e-9·(1 + max|node|)`.
pub fn default_cluster_tol(nodes: &[Complex64]) -> f64 {
    1e-9 * (1.0 + nodes.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// Clusters of coincident nodes: the transitive closure of
/// `|node_i - node_j| <= tol`. Clusters are listed by smallest member.
pub fn clusters(nodes: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = nodes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (nodes[i] - nodes[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    groups
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointClusters {
    pub omega: f64,
    pub tol: f64,
    pub sizes: Vec<usize>,
    /// Members of the largest cluster.
    pub largest: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityReport {
    pub points: Vec<PointClusters>,
    /// Largest cluster size over the grid.
    pub n_max: usize,
    /// A grid point attaining `n_max` and the colliding node indices.
    pub witness_omega: f64,
    pub witness_nodes: Vec<usize>,
}

/// Node multiplicities on a grid. `tol = None` uses
/// [`default_cluster_tol`] at each grid point.
pub fn multiplicity(kernel: &Kernel, m: u64, grid: &FrequencyGrid, tol: Option<f64>) -> Result<MultiplicityReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("multiplicity needs m >= 1".into()));
    }
    if let Some(t) = tol {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::InvalidArgument("cluster tolerance must be positive".into()));
        }
    }
    let points: Vec<PointClusters> = (0..grid.size())
        .into_par_iter()
        .map(|k| {
            let w = grid.point(k);
            let nv = nodes(kernel, m, w).expect("m >= 1");
            let t = tol.unwrap_or_else(|| default_cluster_tol(nv.nodes()));
            let groups = clusters(nv.nodes(), t);
            let largest = groups.iter().max_by_key(|g| g.len()).cloned().unwrap_or_default();
            PointClusters {
                omega: w.value(),
                tol: t,
                sizes: groups.iter().map(Vec::len).collect(),
                largest,
            }
        })
        .collect();
    let best = points
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.largest.len().cmp(&b.1.largest.len()).then(b.0.cmp(&a.0)))
        .map(|(_, p)| p)
        .expect("grid is nonempty");
    Ok(MultiplicityReport {
        n_max: best.largest.len(),
        witness_omega: best.omega,
        witness_nodes: best.largest.clone(),
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum VerdictStatus {
    Pass,
    Marginal,
    Fail,
}

/// Outcome of [`completeness_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub verdict: VerdictStatus,
    pub reason: String,
    pub witness_omega: Option<f64>,
    pub witness_nodes: Vec<usize>,
    pub n_max: usize,
    pub nl: u64,
    pub m: u64,
    /// Smallest singular value over the grid, when the sweep ran.
    pub min_sigma: Option<f64>,
}

/// Checks the necessary conditions `NL >= m` and `L >= max multiplicity`,
/// then sweeps the grid for the smallest singular value of the stacked
/// system. The verdict is PASS when `σ_min(ω) > rank_tol · σ_max(ω)` at every
/// grid point and MARGINAL otherwise.
pub fn completeness_check(
    kernel: &Kernel,
    m: u64,
    l: u64,
    n_steps: u32,
    grid: &FrequencyGrid,
    rank_tol: f64,
) -> Result<Verdict> {
    check_dims(m, l, n_steps)?;
    let nl = n_steps as u64 * l;
    let mult = multiplicity(kernel, m, grid, None)?;
    if nl < m {
        return Ok(Verdict {
            verdict: VerdictStatus::Fail,
            reason: format!("NL = {nl} < m = {m}"),
            witness_omega: None,
            witness_nodes: Vec::new(),
            n_max: mult.n_max,
            nl,
            m,
            min_sigma: None,
        });
    }
    if (l as usize) < mult.n_max {
        return Ok(Verdict {
            verdict: VerdictStatus::Fail,
            reason: format!("node multiplicity {} > L = {l}", mult.n_max),
            witness_omega: Some(mult.witness_omega),
            witness_nodes: mult.witness_nodes.clone(),
            n_max: mult.n_max,
            nl,
            m,
            min_sigma: None,
        });
    }
    let sweep: Vec<(f64, f64, f64)> = (0..grid.size())
        .into_par_iter()
        .map(|k| {
            let w = grid.point(k);
            let sys = build_system(kernel, m, l, n_steps, w).expect("dims checked");
            let (lo, hi) = linalg::extreme_singular_values(sys.matrix());
            (w.value(), lo, hi)
        })
        .collect();
    let min_sigma = sweep.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
    let worst = sweep
        .iter()
        .min_by(|a, b| (a.1 / a.2).total_cmp(&(b.1 / b.2)))
        .copied()
        .expect("grid is nonempty");
    let pass = sweep.iter().all(|&(_, lo, hi)| lo > rank_tol * hi);
    let (verdict, reason, witness) = if pass {
        (
            VerdictStatus::Pass,
            format!("stacked system has full column rank on the grid; min sigma = {min_sigma:.6e}"),
            None,
        )
    } else {
        (
            VerdictStatus::Marginal,
            format!(
                "sigma_min / sigma_max = {:.3e} <= {rank_tol:.1e} at omega = {}",
                worst.1 / worst.2,
                worst.0
            ),
            Some(worst.0),
        )
    };
    Ok(Verdict {
        verdict,
        reason,
        witness_omega: witness,
        witness_nodes: Vec::new(),
        n_max: mult.n_max,
        nl,
        m,
        min_sigma: Some(min_sigma),
    })
}

/// Gautschi's bound on the inverse norm of the square Vandermonde system:
/// `√m · max_i Π_{j≠i} (1 + |x_j|) / |x_j - x_i|`, `+∞` on coincident nodes.
pub fn gautschi_bound(nv: &NodeVector) -> f64 {
    let x = nv.nodes();
    let m = x.len();
    let worst = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i)
                .map(|j| {
                    let gap = (x[j] - x[i]).norm();
                    if gap == 0.0 {
                        f64::INFINITY
                    } else {
                        (1.0 + x[j].norm()) / gap
                    }
                })
                .product::<f64>()
        })
        .fold(0.0, f64::max);
    (m as f64).sqrt() * worst
}

fn inverse_norm_of(matrix: &DMatrix<Complex64>) -> f64 {
    let (lo, hi) = linalg::extreme_singular_values(matrix);
    let dim = matrix.nrows().max(matrix.ncols()) as f64;
    if hi == 0.0 || lo <= hi * f64::EPSILON * dim {
        f64::INFINITY
    } else {
        1.0 / lo
    }
}

/// `1 / σ_min`, or `+∞` when the system is singular to working precision.
pub fn inverse_norm(system: &StackedSystem) -> Result<f64> {
    let a = system.matrix();
    if a.nrows() < a.ncols() {
        return Err(Error::Dimension(format!(
            "inverse norm needs rows >= columns, got {} x {}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(inverse_norm_of(a))
}

/// Grid maximum of the inverse norm of the `L = 1` system. This is a lower
/// estimate of the supremum over 𝕋; see [`refine_sup_inverse_norm`].
pub fn sup_inverse_norm(kernel: &Kernel, m: u64, n_steps: u32, grid: &FrequencyGrid) -> Result<f64> {
    sup_inverse_norm_stacked(kernel, m, 1, n_steps, grid)
}

/// Grid maximum of the inverse norm of the stacked system with `L` offsets.
pub fn sup_inverse_norm_stacked(kernel: &Kernel, m: u64, l: u64, n_steps: u32, grid: &FrequencyGrid) -> Result<f64> {
    check_dims(m, l, n_steps)?;
    if (n_steps as u64) * l < m {
        return Err(Error::Dimension(format!("need NL >= m, got N = {n_steps}, L = {l}, m = {m}")));
    }
    Ok((0..grid.size())
        .into_par_iter()
        .map(|k| {
            let sys = build_system(kernel, m, l, n_steps, grid.point(k)).expect("dims checked");
            inverse_norm_of(sys.matrix())
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupEstimate {
    pub value: f64,
    pub grid_size: u64,
    /// `(M, grid sup)` for every grid visited.
    pub history: Vec<(u64, f64)>,
    pub converged: bool,
    /// Lipschitz constant of the symbol, reported for context.
    pub symbol_lipschitz: f64,
}

/// Doubles the grid until successive sups differ by less than `rtol`
/// (relative) or `max_doublings` is reached.
pub fn refine_sup_inverse_norm(
    kernel: &Kernel,
    m: u64,
    n_steps: u32,
    grid: &FrequencyGrid,
    rtol: f64,
    max_doublings: u32,
) -> Result<SupEstimate> {
    let mut g = *grid;
    let mut value = sup_inverse_norm(kernel, m, n_steps, &g)?;
    let mut history = vec![(g.size(), value)];
    let mut converged = false;
    for _ in 0..max_doublings {
        g = g.refined();
        let next = sup_inverse_norm(kernel, m, n_steps, &g)?;
        history.push((g.size(), next));
        let settled = (next.is_infinite() && value.is_infinite()) || (next - value).abs() <= rtol * next.abs();
        value = next;
        if settled {
            converged = true;
            break;
        }
    }
    Ok(SupEstimate {
        value,
        grid_size: g.size(),
        history,
        converged,
        symbol_lipschitz: kernel.symbol_lipschitz(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    /// `min_ω min_{i<j} |node_i - node_j|`.
    pub separation: f64,
    pub omega: f64,
    pub i: usize,
    pub j: usize,
}

pub fn node_separation(kernel: &Kernel, m: u64, grid: &FrequencyGrid) -> Result<SeparationReport> {
    if m < 2 {
        return Err(Error::InvalidArgument("node separation needs m >= 2".into()));
    }
    let per_point: Vec<SeparationReport> = (0..grid.size())
        .into_par_iter()
        .map(|k| {
            let w = grid.point(k);
            let nv = nodes(kernel, m, w).expect("m >= 1");
            let x = nv.nodes();
            let mut best = SeparationReport {
                separation: f64::INFINITY,
                omega: w.value(),
                i: 0,
                j: 1,
            };
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    let d = (x[i] - x[j]).norm();
                    if d < best.separation {
                        best.separation = d;
                        best.i = i;
                        best.j = j;
                    }
                }
            }
            best
        })
        .collect();
    Ok(per_point
        .into_iter()
        .reduce(|a, b| if b.separation < a.separation { b } else { a })
        .expect("grid is nonempty"))
}

/// One row of the per-frequency diagnostic table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiagnosticRow {
    pub omega: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub gautschi_bound: f64,
    pub max_cluster: usize,
}

/// Singular values of the stacked system, the Gautschi bound of the node
/// family and the largest node cluster at every grid point.
pub fn diagnose(kernel: &Kernel, m: u64, l: u64, n_steps: u32, grid: &FrequencyGrid) -> Result<Vec<DiagnosticRow>> {
    check_dims(m, l, n_steps)?;
    let offsets: Vec<u64> = (0..l).collect();
    Ok((0..grid.size())
        .into_par_iter()
        .map(|k| {
            let w = grid.point(k);
            let nv = nodes(kernel, m, w).expect("m >= 1");
            let sys = StackedSystem::from_nodes(&nv, &offsets, n_steps);
            let (lo, hi) = linalg::extreme_singular_values(sys.matrix());
            let tol = default_cluster_tol(nv.nodes());
            let max_cluster = clusters(nv.nodes(), tol).iter().map(Vec::len).max().unwrap_or(0);
            DiagnosticRow {
                omega: w.value(),
                sigma_min: lo,
                sigma_max: hi,
                gautschi_bound: gautschi_bound(&nv),
                max_cluster,
            }
        })
        .collect())
}
