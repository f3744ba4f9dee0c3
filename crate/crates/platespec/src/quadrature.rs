//! Gauss-Legendre panel quadrature in the radial frequency variable.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::par::pairwise_sum;
use crate::params::ZonePartition;

/// Nodes and weights of the `k`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; k];
    let mut w = vec![0.0; k];
    for i in 0..k {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=k {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = k as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// `omega_{n-1} = 2 pi^(n/2) / Gamma(n/2)`
pub fn sphere_area(n: u32) -> f64 {
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

pub const DEFAULT_R_MIN: f64 = 1e-6;
pub const DEFAULT_R_MAX: f64 = 1e4;
/// 160 panels per decade, enough to resolve the beating of oscillating
/// branches up to `t = 1e4`.
pub const DEFAULT_PANELS: usize = 1600;
pub const DEFAULT_PER_PANEL: usize = 16;

/// Log-spaced Gauss-Legendre panels over `[r_min, r_max]` plus one panel on `[0, r_min]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialQuadrature {
    /// Panel boundaries, starting at 0.
    pub edges: Vec<f64>,
    pub nodes: Vec<f64>,
    /// Weights for `dr`; the measure `omega r^(n-1)` is applied by [`Self::measure`].
    pub weights: Vec<f64>,
    pub per_panel: usize,
    pub dim_n: u32,
    pub sphere_area: f64,
}

impl RadialQuadrature {
    pub fn new(r_min: f64, r_max: f64, panels: usize, per_panel: usize, dim_n: u32) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) || panels == 0 || per_panel == 0 || dim_n == 0 {
            return Err(Error::InvalidParams(format!(
                "bad quadrature: r in [{r_min}, {r_max}], {panels} panels, {per_panel} nodes, n = {dim_n}"
            )));
        }
        let (l0, l1) = (r_min.ln(), r_max.ln());
        let mut edges = vec![0.0];
        edges.extend((0..=panels).map(|k| (l0 + (l1 - l0) * k as f64 / panels as f64).exp()));
        edges[1] = r_min;
        edges[panels + 1] = r_max;
        Ok(Self::from_edges(edges, per_panel, dim_n))
    }

    fn from_edges(edges: Vec<f64>, per_panel: usize, dim_n: u32) -> Self {
        let (x, w) = gauss_legendre(per_panel);
        let mut nodes = Vec::with_capacity((edges.len() - 1) * per_panel);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for e in edges.windows(2) {
            let (h, m) = ((e[1] - e[0]) / 2.0, (e[1] + e[0]) / 2.0);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(m + h * xi);
                weights.push(h * wi);
            }
        }
        Self { edges, nodes, weights, per_panel, dim_n, sphere_area: sphere_area(dim_n) }
    }

    /// Splits the panels containing each breakpoint so that no panel straddles it.
    pub fn with_breakpoints(&self, breaks: &[f64]) -> Self {
        let mut edges = self.edges.clone();
        for &b in breaks {
            let r_max = *edges.last().unwrap();
            if b > 0.0 && b < r_max && !edges.iter().any(|e| (e - b).abs() <= 1e-12 * b) {
                edges.push(b);
            }
        }
        edges.sort_by(f64::total_cmp);
        Self::from_edges(edges, self.per_panel, self.dim_n)
    }

    /// The default grid with the zone cutoffs as breakpoints.
    pub fn default_for(dim_n: u32) -> Result<Self> {
        Self::for_partition(dim_n, &ZonePartition::default())
    }

    pub fn for_partition(dim_n: u32, zones: &ZonePartition) -> Result<Self> {
        Ok(Self::new(DEFAULT_R_MIN, DEFAULT_R_MAX, DEFAULT_PANELS, DEFAULT_PER_PANEL, dim_n)?
            .with_breakpoints(&[zones.eps, zones.big_n]))
    }

    /// Same panels, twice the nodes per panel.
    pub fn refined(&self) -> Self {
        Self::from_edges(self.edges.clone(), 2 * self.per_panel, self.dim_n)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `weight_k * omega * r_k^(n-1)`
    pub fn measure(&self, k: usize) -> f64 {
        self.weights[k] * self.sphere_area * self.nodes[k].powi(self.dim_n as i32 - 1)
    }

    /// Integral of a radial function over `R^n`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = (0..self.len()).map(|k| self.measure(k) * f(self.nodes[k])).collect();
        pairwise_sum(&terms)
    }
}
