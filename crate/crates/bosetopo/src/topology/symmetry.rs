use std::fmt;

use crate::linalg::{max_abs, CMat, C64, I};
use crate::models::BlochSymbol;
use crate::qbh::{beta_matrix, matrix_commutator, BetaGenerator, QuadraticHamiltonian};

/// A subset of the three basic symmetries: time reversal `𝒯`, particle
/// number `𝒩` and squeezing `𝒮`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClassLabel {
    pub t: bool,
    pub n: bool,
    pub s: bool,
}

impl ClassLabel {
    pub fn size(&self) -> usize {
        self.t as usize + self.n as usize + self.s as usize
    }

    pub fn contains(&self, other: &ClassLabel) -> bool {
        (!other.t || self.t) && (!other.n || self.n) && (!other.s || self.s)
    }

    /// The classes whose invariant is the winding number.
    pub fn is_winding_class(&self) -> bool {
        self.s && !self.t && !self.n
    }

    /// The classes whose invariant is the Pfaffian sign.
    pub fn is_pfaffian_class(&self) -> bool {
        self.s && self.n && !self.t
    }

    /// Preference order when dressings compete: classes with an invariant
    /// first, then larger classes. The undressed SSH chain is `{T,N}` while
    /// its dressed form is `{N,S}`, which is the one that carries topology.
    pub fn rank(&self) -> (bool, usize) {
        (self.is_winding_class() || self.is_pfaffian_class(), self.size())
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.t {
            parts.push("T");
        }
        if self.n {
            parts.push("N");
        }
        if self.s {
            parts.push("S");
        }
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Per-mode phases `i^{q_j}` applied as `a_j ↦ i^{q_j} a_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dressing {
    pub quarter_turns: Vec<u8>,
    pub class_label: ClassLabel,
    pub squeezing: Option<(f64, f64)>,
}

impl Dressing {
    pub fn phases(&self) -> Vec<C64> {
        self.quarter_turns.iter().map(|&q| I.powi(q as i32)).collect()
    }

    /// The dressed Hamiltonian `K'_ij = i^{q_j−q_i} K_ij`,
    /// `Δ'_ij = i^{−q_i−q_j} Δ_ij`.
    pub fn apply(&self, h: &QuadraticHamiltonian) -> crate::Result<QuadraticHamiltonian> {
        let (k, d) = dress_matrices(h.k(), h.delta(), &self.phases());
        h.with_matrices(k, d)
    }
}

pub(crate) fn dress_matrices(k: &CMat, d: &CMat, phases: &[C64]) -> (CMat, CMat) {
    let n = k.nrows();
    let mut k2 = k.clone();
    let mut d2 = d.clone();
    for i in 0..n {
        for j in 0..n {
            k2[[i, j]] = phases[i].conj() * k[[i, j]] * phases[j];
            d2[[i, j]] = phases[i].conj() * d[[i, j]] * phases[j].conj();
        }
    }
    (k2, d2)
}

/// Commutator norms backing a class decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassResiduals {
    /// `max|Im G|`
    pub time_reversal: f64,
    /// `max|[G, β₃]|`
    pub number: f64,
    /// `max|[G, n1β₁ + n2β₂]|` at the best axis.
    pub squeezing: f64,
    /// `max|G|`, the scale the tolerance multiplies.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryClassReport {
    pub time_reversal: bool,
    pub number: bool,
    pub squeezing: Option<(f64, f64)>,
    pub class_label: ClassLabel,
    pub local_dressing: Option<Dressing>,
    pub residuals: ClassResiduals,
}

impl SymmetryClassReport {
    /// The class after dressing when a dressing was found, otherwise the bare
    /// class.
    pub fn effective_class(&self) -> ClassLabel {
        self.local_dressing.as_ref().map_or(self.class_label, |d| d.class_label)
    }
}

/// Best squeezing axis for a pair `(K, Δ)` given as flat lists of entries:
/// `[G, n1β₁ + n2β₂] = 0` requires `Re K = 0` and `n2·Im Δ = n1·Re Δ`.
/// Returns the unit axis minimizing the second residual (the smallest
/// right singular vector of the two-column system) and the residual.
fn squeezing_axis(delta_entries: &[C64]) -> ((f64, f64), f64) {
    // Columns: coefficient of n1 is −Re Δ, of n2 is Im Δ.
    let (mut a11, mut a12, mut a22) = (0.0, 0.0, 0.0);
    for z in delta_entries {
        let (x, y) = (-z.re, z.im);
        a11 += x * x;
        a12 += x * y;
        a22 += y * y;
    }
    // Smallest eigenpair of [[a11, a12], [a12, a22]].
    let tr = a11 + a22;
    let disc = ((a11 - a22).powi(2) + 4.0 * a12 * a12).sqrt();
    let lmin = ((tr - disc) / 2.0).max(0.0);
    let (mut n1, mut n2) = if a12.abs() > 0.0 {
        (a12, lmin - a11)
    } else if a11 <= a22 {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    let nrm = (n1 * n1 + n2 * n2).sqrt();
    n1 /= nrm;
    n2 /= nrm;
    // Fix the overall sign: first nonzero component positive.
    if n1 < 0.0 || (n1 == 0.0 && n2 < 0.0) {
        n1 = -n1;
        n2 = -n2;
    }
    let res = delta_entries.iter().map(|z| (n2 * z.im - n1 * z.re).abs()).fold(0.0, f64::max);
    ((n1, n2), res)
}

/// Classifies the bare `(K, Δ)` pair with commutators evaluated on `G`.
fn classify_matrices(k: &CMat, d: &CMat, tol: f64) -> (ClassLabel, Option<(f64, f64)>, ClassResiduals) {
    let n = k.nrows();
    let g = crate::linalg::block2(k, &(-d), &d.mapv(|z| z.conj()), &(-k.mapv(|z| z.conj())));
    let scale = max_abs(&g);
    let thresh = tol * scale.max(f64::MIN_POSITIVE);
    let tr = g.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let b3 = beta_matrix(BetaGenerator::N, n).expect("positive size");
    let num = max_abs(&matrix_commutator(&g, b3.matrix()).expect("same size"));
    let entries: Vec<C64> = d.iter().copied().collect();
    let (axis, _) = squeezing_axis(&entries);
    let bs = beta_matrix(BetaGenerator::S(axis.0, axis.1), n).expect("unit axis");
    let sq = max_abs(&matrix_commutator(&g, bs.matrix()).expect("same size"));
    let label = ClassLabel { t: tr <= thresh, n: num <= thresh, s: sq <= thresh };
    let residuals = ClassResiduals { time_reversal: tr, number: num, squeezing: sq, scale };
    (label, label.s.then_some(axis), residuals)
}

/// Detects the symmetry class of `h`.
///
/// With `search_dressing`, diagonal gauge transformations with phases in
/// `{1, i, −1, −i}` are searched for a better class (see
/// [`ClassLabel::rank`]). Only the
/// parity of each quarter-turn count matters for membership, so the search
/// solves two-colouring problems on the coupling graph of `h`.
pub fn detect_symmetry_class(h: &QuadraticHamiltonian, tol: f64, search_dressing: bool) -> SymmetryClassReport {
    let (label, squeezing, residuals) = classify_matrices(h.k(), h.delta(), tol);
    let mut report = SymmetryClassReport {
        time_reversal: label.t,
        number: label.n,
        squeezing,
        class_label: label,
        local_dressing: None,
        residuals,
    };
    if search_dressing {
        let mut best: Option<Dressing> = None;
        for target in [Target::Squeezing, Target::Reality] {
            for flip in [false, true] {
                if let Some(q) = solve_parities(h.k(), h.delta(), target, flip, tol) {
                    let phases: Vec<C64> = q.iter().map(|&b| if b { I } else { C64::new(1.0, 0.0) }).collect();
                    let (k2, d2) = dress_matrices(h.k(), h.delta(), &phases);
                    let (l2, s2, _) = classify_matrices(&k2, &d2, tol);
                    let better = l2.rank() > best.as_ref().map_or(label.rank(), |b| b.class_label.rank());
                    if better && l2.n == label.n {
                        best = Some(Dressing {
                            quarter_turns: q.iter().map(|&b| b as u8).collect(),
                            class_label: l2,
                            squeezing: s2,
                        });
                    }
                }
            }
        }
        report.local_dressing = best;
    }
    report
}

#[derive(Clone, Copy, PartialEq)]
enum Target {
    /// Make `K` purely imaginary and give `Δ` a common axis.
    Squeezing,
    /// Make `K` and `Δ` real.
    Reality,
}

/// Quarter-turn phase of a nonzero entry if it lies on the real or
/// imaginary axis (to `tol`): `Some(0)` real, `Some(1)` imaginary.
fn axis_parity(z: C64, tol: f64) -> Option<bool> {
    if z.im.abs() <= tol * z.norm() {
        Some(false)
    } else if z.re.abs() <= tol * z.norm() {
        Some(true)
    } else {
        None
    }
}

/// Solves the XOR constraints `q_i ⊕ q_j = p_ij` by breadth-first search.
/// `flip` selects the alternative global axis for `Δ`.
fn solve_parities(k: &CMat, d: &CMat, target: Target, flip: bool, tol: f64) -> Option<Vec<bool>> {
    let n = k.nrows();
    let scale = max_abs(k).max(max_abs(d)).max(f64::MIN_POSITIVE);
    let tiny = tol * scale;
    let mut edges: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    let mut fixed: Vec<Option<bool>> = vec![None; n];
    for i in 0..n {
        // Diagonal of K is untouched by dressing.
        if k[[i, i]].norm() > tiny && (target == Target::Squeezing || k[[i, i]].im.abs() > tiny) {
            return None;
        }
        for j in 0..n {
            let kij = k[[i, j]];
            if i != j && kij.norm() > tiny {
                let p = axis_parity(kij, tol)?;
                // K'_ij carries i^{q_j − q_i}; the entry must end up
                // imaginary for squeezing, real for reality.
                let want_imag = target == Target::Squeezing;
                edges[i].push((j, p != want_imag));
            }
            let dij = d[[i, j]];
            if dij.norm() > tiny {
                let p = axis_parity(dij, tol)?;
                // Δ'_ij carries i^{−q_i − q_j}; q_i + q_j has the parity of
                // q_i ⊕ q_j.
                let want = match target {
                    Target::Squeezing => flip,
                    Target::Reality => false,
                };
                let parity = p != want;
                if i == j {
                    // 2q_i is even; only a global flip can fix the parity.
                    if parity {
                        return None;
                    }
                } else {
                    edges[i].push((j, parity));
                }
            }
        }
    }
    for start in 0..n {
        if fixed[start].is_some() {
            continue;
        }
        fixed[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let qi = fixed[i].unwrap();
            for &(j, p) in &edges[i] {
                let want = qi ^ p;
                match fixed[j] {
                    None => {
                        fixed[j] = Some(want);
                        queue.push_back(j);
                    }
                    Some(qj) if qj != want => return None,
                    _ => {}
                }
            }
        }
    }
    Some(fixed.into_iter().map(|q| q.unwrap()).collect())
}

/// Class of a Bloch symbol read off its blocks.
pub fn classify_symbol(sym: &BlochSymbol, tol: f64) -> (ClassLabel, Option<(f64, f64)>) {
    let scale = sym.scale().max(f64::MIN_POSITIVE);
    let thresh = tol * scale;
    let mut tr = 0.0f64;
    let mut kre = 0.0f64;
    let mut num = 0.0f64;
    let mut deltas = Vec::new();
    for (k, d) in sym.blocks().values() {
        for z in k.iter().chain(d.iter()) {
            tr = tr.max(z.im.abs());
        }
        for z in k.iter() {
            kre = kre.max(z.re.abs());
        }
        for z in d.iter() {
            num = num.max(z.norm());
            deltas.push(*z);
        }
    }
    let (axis, res) = squeezing_axis(&deltas);
    // The commutator with n1β₁ + n2β₂ is block-linear in Re K and in
    // n2·Im Δ − n1·Re Δ, with factors of order one.
    let s = kre.max(res) <= thresh;
    let label = ClassLabel { t: tr <= thresh, n: num <= thresh, s };
    (label, s.then_some(axis))
}

/// Symbol-level dressing: per-orbital phases `φ_α ∈ {1, i}` combined with a
/// twist `ω ∈ {1, i}` per cell, i.e. `a_{c,α} ↦ φ_α ω^c a_{c,α}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDressing {
    pub orbital_quarter_turns: Vec<u8>,
    pub twist_quarter_turns: u8,
    pub class_label: ClassLabel,
}

impl SymbolDressing {
    pub fn apply(&self, sym: &BlochSymbol) -> crate::Result<BlochSymbol> {
        apply_symbol_dressing(sym, &self.orbital_quarter_turns, self.twist_quarter_turns)
    }
}

fn apply_symbol_dressing(sym: &BlochSymbol, orb: &[u8], twist: u8) -> crate::Result<BlochSymbol> {
    let phases: Vec<C64> = orb.iter().map(|&q| I.powi(q as i32)).collect();
    let w = I.powi(twist as i32);
    sym.map_blocks(|r, k, d| {
        let n = k.nrows();
        let mut k2 = k.clone();
        let mut d2 = d.clone();
        let wr = w.powi(-(r as i32));
        for a in 0..n {
            for b in 0..n {
                k2[[a, b]] = phases[a].conj() * phases[b] * wr * k[[a, b]];
                d2[[a, b]] = phases[a].conj() * phases[b].conj() * wr * d[[a, b]];
            }
        }
        (k2, d2)
    })
}

/// Searches symbol dressings for a class with an invariant, then for the
/// largest class. Twists are only tried
/// when the symbol has no pairing, since a twisted pairing term is no longer
/// translation invariant.
pub fn find_symbol_dressing(sym: &BlochSymbol, tol: f64) -> Option<SymbolDressing> {
    let (bare, _) = classify_symbol(sym, tol);
    let n = sym.n_cell();
    if n > 16 {
        return None;
    }
    let twists: &[u8] = if sym.conserves_number() { &[0, 1] } else { &[0] };
    let mut best: Option<SymbolDressing> = None;
    for &twist in twists {
        for mask in 0u32..(1 << n) {
            let orb: Vec<u8> = (0..n).map(|a| ((mask >> a) & 1) as u8).collect();
            let Ok(dressed) = apply_symbol_dressing(sym, &orb, twist) else { continue };
            let (label, _) = classify_symbol(&dressed, tol);
            let current = best.as_ref().map_or(bare.rank(), |b| b.class_label.rank());
            if label.rank() > current && label.n == bare.n {
                best =
                    Some(SymbolDressing { orbital_quarter_turns: orb, twist_quarter_turns: twist, class_label: label });
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn axis_fit_recovers_a_tilted_axis() {
        let (n1, n2) = (0.6, 0.8);
        // Δ = (n2 + i n1)·X
        let entries: Vec<C64> = [1.0, -2.0, 0.5].iter().map(|x| c(n2, n1) * *x).collect();
        let ((a, b), res) = squeezing_axis(&entries);
        assert!((a - n1).abs() < 1e-12 && (b - n2).abs() < 1e-12, "{a} {b}");
        assert!(res < 1e-12);
    }

    #[test]
    fn class_labels_print_compactly() {
        assert_eq!(ClassLabel { t: false, n: true, s: true }.to_string(), "{N,S}");
        assert_eq!(ClassLabel::default().to_string(), "{}");
    }
}
