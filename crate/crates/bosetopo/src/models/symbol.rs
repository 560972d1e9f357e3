use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{block2, dagger, max_abs, zeros, CMat, I};
use crate::qbh::QuadraticHamiltonian;

/// Fourier blocks `{K_r, Δ_r}` of a translation-invariant chain.
///
/// `K_r[α][β]` couples orbital `β` of cell `j` to orbital `α` of cell `j + r`,
/// so the lower shift `T_N` maps to `e^{ik}` and
/// `K(k) = Σ_r e^{ikr} K_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochSymbol {
    n_cell: usize,
    blocks: BTreeMap<i64, (CMat, CMat)>,
}

impl BlochSymbol {
    /// Validates `K_{−r} = K_r†` and `Δ_{−r} = Δ_rᵀ`; missing partners are
    /// treated as zero blocks and must then vanish.
    pub fn new(n_cell: usize, blocks: BTreeMap<i64, (CMat, CMat)>) -> Result<Self> {
        if n_cell == 0 {
            return Err(Error::InvalidParameter("a symbol needs at least one orbital per cell".into()));
        }
        let zero = zeros(n_cell, n_cell);
        let scale = blocks.values().map(|(k, d)| max_abs(k).max(max_abs(d))).fold(1.0, f64::max);
        for (r, (k, d)) in &blocks {
            if k.dim() != (n_cell, n_cell) || d.dim() != (n_cell, n_cell) {
                return Err(Error::DimensionMismatch(format!("block {r} is not {n_cell}×{n_cell}")));
            }
            let (km, dm) = blocks.get(&-r).map(|(a, b)| (a.clone(), b.clone())).unwrap_or((zero.clone(), zero.clone()));
            let herm = max_abs(&(&km - &dagger(k)));
            let sym = max_abs(&(&dm - &d.t()));
            if herm > 1e-12 * scale || sym > 1e-12 * scale {
                return Err(Error::Structure { property: "a Hermitian/symmetric symbol", residual: herm.max(sym) });
            }
        }
        Ok(Self { n_cell, blocks })
    }

    /// Reads the blocks around `cell` of an open chain, up to range `r_max`.
    pub fn from_chain(h: &QuadraticHamiltonian, cell: usize, r_max: usize) -> Result<Self> {
        let cell_modes = h.layout().cell_modes();
        let nc = cell_modes.len();
        if cell < r_max || cell + r_max >= nc {
            return Err(Error::InvalidParameter(format!("cell {cell} too close to the ends for range {r_max}")));
        }
        let n_cell = cell_modes[cell].len();
        if cell_modes.iter().any(|m| m.len() != n_cell) {
            return Err(Error::NotTranslationInvariant("cells hold different numbers of orbitals".into()));
        }
        let mut blocks = BTreeMap::new();
        let r_max = r_max as i64;
        for r in -r_max..=r_max {
            let row_cell = (cell as i64 + r) as usize;
            let mut k = zeros(n_cell, n_cell);
            let mut d = zeros(n_cell, n_cell);
            for a in 0..n_cell {
                for b in 0..n_cell {
                    let i = cell_modes[row_cell][a];
                    let j = cell_modes[cell][b];
                    k[[a, b]] = h.k()[[i, j]];
                    d[[a, b]] = h.delta()[[i, j]];
                }
            }
            if max_abs(&k) > 0.0 || max_abs(&d) > 0.0 || r == 0 {
                blocks.insert(r, (k, d));
            }
        }
        // Couplings reaching further than r_max would be silently dropped.
        let reach = h.layout().cells.iter().zip(0..).flat_map(|(&ci, i)| {
            h.layout()
                .cells
                .iter()
                .zip(0..)
                .filter_map(move |(&cj, j)| (ci == cell || cj == cell).then_some((ci.abs_diff(cj), i, j)))
        });
        for (dist, i, j) in reach {
            if dist as i64 > r_max && (h.k()[[i, j]].norm() > 0.0 || h.delta()[[i, j]].norm() > 0.0) {
                return Err(Error::NotTranslationInvariant(format!("coupling of range {dist} exceeds {r_max}")));
            }
        }
        Self::new(n_cell, blocks)
    }

    pub fn n_cell(&self) -> usize {
        self.n_cell
    }

    pub fn blocks(&self) -> &BTreeMap<i64, (CMat, CMat)> {
        &self.blocks
    }

    pub fn range(&self) -> i64 {
        self.blocks.keys().map(|r| r.abs()).max().unwrap_or(0)
    }

    pub fn conserves_number(&self) -> bool {
        self.blocks.values().all(|(_, d)| max_abs(d) == 0.0)
    }

    /// `K(k) = Σ_r e^{ikr} K_r`.
    pub fn k_at(&self, k: f64) -> CMat {
        self.sum_at(k, |(kr, _)| kr)
    }

    /// `Δ(k) = Σ_r e^{ikr} Δ_r`.
    pub fn delta_at(&self, k: f64) -> CMat {
        self.sum_at(k, |(_, dr)| dr)
    }

    pub fn evaluate(&self, k: f64) -> (CMat, CMat) {
        (self.k_at(k), self.delta_at(k))
    }

    /// Symbol of the dynamical matrix,
    /// `G(k) = [[K(k), −Δ(k)], [Δ(−k)*, −K(−k)*]]`.
    pub fn dynamical_at(&self, k: f64) -> CMat {
        let kp = self.k_at(k);
        let dp = self.delta_at(k);
        let km = self.k_at(-k).mapv(|z| z.conj());
        let dm = self.delta_at(-k).mapv(|z| z.conj());
        block2(&kp, &(-dp), &dm, &(-km))
    }

    fn sum_at<'a>(&'a self, k: f64, pick: impl Fn(&'a (CMat, CMat)) -> &'a CMat) -> CMat {
        let mut out = zeros(self.n_cell, self.n_cell);
        for (r, pair) in &self.blocks {
            let phase = (I * (k * *r as f64)).exp();
            out.scaled_add(phase, pick(pair));
        }
        out
    }

    /// Applies `X_r ↦ f(r, X_r)` to every `K_r` and `Δ_r`.
    pub fn map_blocks(&self, f: impl Fn(i64, &CMat, &CMat) -> (CMat, CMat)) -> Result<Self> {
        let blocks = self.blocks.iter().map(|(r, (k, d))| (*r, f(*r, k, d))).collect();
        Self::new(self.n_cell, blocks)
    }

    pub fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        if self.n_cell != other.n_cell {
            return false;
        }
        let keys: std::collections::BTreeSet<i64> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        let zero = zeros(self.n_cell, self.n_cell);
        let scale = self
            .blocks
            .values()
            .chain(other.blocks.values())
            .map(|(k, d)| max_abs(k).max(max_abs(d)))
            .fold(1.0, f64::max);
        keys.iter().all(|r| {
            let (ka, da) = self.blocks.get(r).map(|(a, b)| (a, b)).unwrap_or((&zero, &zero));
            let (kb, db) = other.blocks.get(r).map(|(a, b)| (a, b)).unwrap_or((&zero, &zero));
            max_abs(&(ka - kb)) <= rel * scale && max_abs(&(da - db)) <= rel * scale
        })
    }

    /// Largest entry over all blocks.
    pub fn scale(&self) -> f64 {
        self.blocks.values().map(|(k, d)| max_abs(k).max(max_abs(d))).fold(0.0, f64::max)
    }
}
