//! Sequential matrix-product-state engine for the photon chain.
//!
//! The generated state is assembled in protocol order. Only the photons that
//! can still be touched by a gate are held densely, in an [`ActiveWindow`] of
//! at most `max_offset + 1` sites; as soon as a photon has seen its last gate
//! it is split off by SVD into a left-canonical site tensor. Nothing is
//! truncated except singular values below [`RETIRE_CUTOFF`] relative to the
//! largest one, so the result is exact to numerical precision.
//!
//! Gate order within step `k` (photon `k` just injected) follows the
//! photon-only form of the protocol: the chain gate on `(k-1, k)` first, then
//! the delayed-photon gates on `(k-o, k)` for the long offsets in decreasing
//! order. The snapshot after step `k` is exactly the `k`-photon state.

use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;
use thiserror::Error;

use crate::gates::{cphase, nearest_neighbor_gate, svd_split, Gate2Q};
use crate::lattice::LatticeDims;

/// Relative singular-value floor used when retiring a photon.
pub const RETIRE_CUTOFF: f64 = 1e-12;

/// Largest active window (photons held densely at once).
pub const MAX_WINDOW: usize = 13;

/// Largest chain that [`SequentialMps::to_dense`] will expand.
pub const DENSE_LIMIT: usize = 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorNetError {
    #[error("no gate given for chain offset {offset}")]
    MissingGate { offset: usize },
    #[error("gate given for offset {offset}, which the lattice does not use")]
    UnexpectedGate { offset: usize },
    #[error("step order {order:?} is not a permutation of the lattice offsets {offsets:?}")]
    BadStepOrder {
        order: Vec<usize>,
        offsets: Vec<usize>,
    },
    #[error("states have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("bond mismatch between sites {site} and {next}")]
    BondMismatch { site: usize, next: usize },
    #[error("site tensor data has {got} entries, expected {expected}")]
    ShapeMismatch { got: usize, expected: usize },
    #[error("{sites} sites exceed the dense expansion limit of {limit}")]
    TooLarge { sites: usize, limit: usize },
    #[error("active window of {window} photons exceeds the limit of {limit}")]
    WindowTooLarge { window: usize, limit: usize },
    #[error("chain index {index} outside 1..={len}")]
    IndexRange { index: usize, len: usize },
}

/// Rank-3 tensor `[left][physical][right]`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteTensor {
    left: usize,
    right: usize,
    data: Vec<Complex64>,
}

impl SiteTensor {
    pub fn new(left: usize, right: usize, data: Vec<Complex64>) -> Result<Self, TensorNetError> {
        let expected = left * 2 * right;
        if data.len() != expected {
            return Err(TensorNetError::ShapeMismatch {
                got: data.len(),
                expected,
            });
        }
        Ok(Self { left, right, data })
    }

    pub fn left_bond(&self) -> usize {
        self.left
    }

    pub fn right_bond(&self) -> usize {
        self.right
    }

    pub fn get(&self, l: usize, s: usize, r: usize) -> Complex64 {
        self.data[(l * 2 + s) * self.right + r]
    }

    /// The `left × right` matrix for physical index `s`.
    fn slice(&self, s: usize) -> Mat<Complex64> {
        Mat::from_fn(self.left, self.right, |l, r| self.get(l, s, r))
    }
}

/// Open-boundary MPS over a photon chain (site 1 first).
#[derive(Debug, Clone, PartialEq)]
pub struct SequentialMps {
    sites: Vec<SiteTensor>,
}

impl SequentialMps {
    pub fn from_sites(sites: Vec<SiteTensor>) -> Result<Self, TensorNetError> {
        if let Some(first) = sites.first() {
            if first.left != 1 {
                return Err(TensorNetError::BondMismatch { site: 0, next: 1 });
            }
        }
        if let Some(last) = sites.last() {
            if last.right != 1 {
                return Err(TensorNetError::BondMismatch {
                    site: sites.len(),
                    next: sites.len() + 1,
                });
            }
        }
        for (i, pair) in sites.windows(2).enumerate() {
            if pair[0].right != pair[1].left {
                return Err(TensorNetError::BondMismatch {
                    site: i + 1,
                    next: i + 2,
                });
            }
        }
        Ok(Self { sites })
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[SiteTensor] {
        &self.sites
    }

    /// Bond dimensions between consecutive sites.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites
            .iter()
            .take(self.sites.len().saturating_sub(1))
            .map(|s| s.right)
            .collect()
    }

    pub fn max_bond(&self) -> usize {
        self.sites
            .iter()
            .map(|s| s.right.max(s.left))
            .max()
            .unwrap_or(1)
    }

    /// Multiply the whole state by `c` (applied to the first site).
    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        if let Some(first) = out.sites.first_mut() {
            first.data.iter_mut().for_each(|z| *z *= c);
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        inner_product(self, self).map(|z| z.re).unwrap_or(0.0)
    }

    /// Amplitude vector of length `2^K`, site 1 as the most significant bit.
    pub fn to_dense(&self) -> Result<Vec<Complex64>, TensorNetError> {
        if self.sites.len() > DENSE_LIMIT {
            return Err(TensorNetError::TooLarge {
                sites: self.sites.len(),
                limit: DENSE_LIMIT,
            });
        }
        // acc[(config, bond)]
        let mut acc = vec![ONE];
        let mut bond = 1;
        for site in &self.sites {
            let configs = acc.len() / bond;
            let mut next = vec![ZERO; configs * 2 * site.right];
            for x in 0..configs {
                for l in 0..bond {
                    let a = acc[x * bond + l];
                    if a == ZERO {
                        continue;
                    }
                    for s in 0..2 {
                        let base = (x * 2 + s) * site.right;
                        for r in 0..site.right {
                            next[base + r] += a * site.get(l, s, r);
                        }
                    }
                }
            }
            acc = next;
            bond = site.right;
        }
        Ok(acc)
    }
}

/// `⟨a|b⟩` by left-to-right transfer-matrix contraction.
pub fn inner_product(a: &SequentialMps, b: &SequentialMps) -> Result<Complex64, TensorNetError> {
    if a.len() != b.len() {
        return Err(TensorNetError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut env = Mat::<Complex64>::from_fn(1, 1, |_, _| ONE);
    for (sa, sb) in a.sites.iter().zip(&b.sites) {
        env = transfer(&env, sa, sb);
    }
    Ok(env[(0, 0)])
}

/// `E'[r, r'] = Σ_{l,l',s} conj(A[l,s,r]) E[l,l'] B[l',s,r']`.
fn transfer(env: &Mat<Complex64>, a: &SiteTensor, b: &SiteTensor) -> Mat<Complex64> {
    let mut out = Mat::<Complex64>::zeros(a.right, b.right);
    for s in 0..2 {
        let eb = env * b.slice(s);
        out += a.slice(s).adjoint() * eb;
    }
    out
}

/// Gate per chain offset. Offset 1 is the chain (nearest-neighbour) bond.
pub type EdgeGates = BTreeMap<usize, Gate2Q>;

/// Ideal CPHASE on every bond.
pub fn ideal_gates(dims: &LatticeDims) -> EdgeGates {
    dims.offsets().into_iter().map(|o| (o, cphase())).collect()
}

/// Photon-photon gates induced by a spin-photon gate `u`: the transformed
/// gate `Ũ` on chain bonds and `u` itself (photon on the earlier site, the
/// later site taking the spin's role) on delayed bonds.
pub fn protocol_gates(dims: &LatticeDims, u: &Gate2Q) -> EdgeGates {
    dims.offsets()
        .into_iter()
        .map(|o| (o, if o == 1 { nearest_neighbor_gate(u) } else { *u }))
        .collect()
}

/// Knobs that change how, but not what, the state is built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Order in which the bonds ending at the newest photon are applied.
    /// `None` uses the protocol order.
    pub step_order: Option<Vec<usize>>,
    /// Keep photons in the window this many steps longer than needed.
    pub retire_lag: usize,
}

/// Protocol order: chain bond first, then delayed bonds by decreasing offset.
pub fn protocol_step_order(dims: &LatticeDims) -> Vec<usize> {
    let mut order = vec![1];
    order.extend(dims.long_offsets().into_iter().rev());
    order
}

/// Dense block over the youngest unfinished photons, attached to the
/// already-emitted tensors through a left bond.
#[derive(Debug, Clone)]
pub struct ActiveWindow {
    /// Chain index of the oldest active photon.
    first: usize,
    n_active: usize,
    left_bond: usize,
    /// `[left][config]`, oldest active photon as the most significant bit.
    block: Vec<Complex64>,
}

impl Default for ActiveWindow {
    fn default() -> Self {
        Self::new()
    }
}

impl ActiveWindow {
    pub fn new() -> Self {
        Self {
            first: 1,
            n_active: 0,
            left_bond: 1,
            block: vec![ONE],
        }
    }

    pub fn first(&self) -> usize {
        self.first
    }

    pub fn n_active(&self) -> usize {
        self.n_active
    }

    pub fn left_bond(&self) -> usize {
        self.left_bond
    }

    pub fn block(&self) -> &[Complex64] {
        &self.block
    }

    /// `‖block‖²`, the squared norm of the whole state when the emitted
    /// tensors are left-canonical.
    pub fn block_norm_sqr(&self) -> f64 {
        self.block.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Append a photon in `|+⟩`.
    pub fn push_plus(&mut self) {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut next = Vec::with_capacity(self.block.len() * 2);
        for &z in &self.block {
            next.push(z * h);
            next.push(z * h);
        }
        self.block = next;
        self.n_active += 1;
    }

    /// Apply `gate` with its first qubit on chain site `first_site` and its
    /// second on `second_site`; both must be active.
    pub fn apply(&mut self, gate: &Gate2Q, first_site: usize, second_site: usize) {
        let pos = |site: usize| {
            assert!(
                site >= self.first && site < self.first + self.n_active,
                "site {site} not in active window"
            );
            self.n_active - 1 - (site - self.first)
        };
        let (ba, bb) = (1usize << pos(first_site), 1usize << pos(second_site));
        let width = 1usize << self.n_active;
        let m = gate.rows();
        let diagonal = gate.is_diagonal(0.0);
        for row in self.block.chunks_exact_mut(width) {
            for x in 0..width {
                if x & (ba | bb) != 0 {
                    continue;
                }
                let idx = [x, x | bb, x | ba, x | ba | bb];
                let v = idx.map(|i| row[i]);
                if diagonal {
                    for j in 0..4 {
                        row[idx[j]] = m[j][j] * v[j];
                    }
                } else {
                    for j in 0..4 {
                        row[idx[j]] =
                            m[j][0] * v[0] + m[j][1] * v[1] + m[j][2] * v[2] + m[j][3] * v[3];
                    }
                }
            }
        }
    }

    /// Split the oldest active photon off as a left-canonical site tensor.
    pub fn retire_oldest(&mut self) -> SiteTensor {
        assert!(self.n_active > 0, "no active photon to retire");
        if self.n_active == 1 {
            let site = SiteTensor {
                left: self.left_bond,
                right: 1,
                data: self.block.clone(),
            };
            self.block = vec![ONE];
            self.left_bond = 1;
            self.n_active = 0;
            self.first += 1;
            return site;
        }
        let rows = self.left_bond * 2;
        let cols = 1usize << (self.n_active - 1);
        // [left][s][rest] is already the row-major (left·2+s, rest) matrix
        let m = Mat::from_fn(rows, cols, |r, c| self.block[r * cols + c]);
        let svd = m.thin_svd().expect("SVD converges for finite input");
        let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
        let smax = s[0].re;
        let kept = (0..s.nrows())
            .take_while(|&i| i == 0 || s[i].re > RETIRE_CUTOFF * smax)
            .count();

        let mut data = vec![ZERO; rows * kept];
        for r in 0..rows {
            for c in 0..kept {
                data[r * kept + c] = u[(r, c)];
            }
        }
        let mut block = vec![ZERO; kept * cols];
        for c in 0..kept {
            let sigma = s[c].re;
            for x in 0..cols {
                block[c * cols + x] = v[(x, c)].conj() * sigma;
            }
        }
        let site = SiteTensor {
            left: self.left_bond,
            right: kept,
            data,
        };
        self.block = block;
        self.left_bond = kept;
        self.n_active -= 1;
        self.first += 1;
        site
    }

    /// `Σ conj(self[l,x]) env[l,l'] other[l',x]`: the overlap of the two full
    /// states given the environment of their emitted tensors.
    pub fn overlap_with(&self, other: &ActiveWindow, env: &Mat<Complex64>) -> Complex64 {
        assert_eq!(self.n_active, other.n_active);
        let cols = 1usize << self.n_active;
        let b = Mat::from_fn(other.left_bond, cols, |l, x| other.block[l * cols + x]);
        let eb = env * b;
        let mut acc = ZERO;
        for l in 0..self.left_bond {
            for x in 0..cols {
                acc += self.block[l * cols + x].conj() * eb[(l, x)];
            }
        }
        acc
    }
}

/// Drives an [`ActiveWindow`] through the protocol one photon at a time.
#[derive(Debug, Clone)]
pub struct SequentialBuilder {
    photons: usize,
    max_offset: usize,
    order: Vec<usize>,
    gates: EdgeGates,
    lag: usize,
    step: usize,
    window: ActiveWindow,
}

impl SequentialBuilder {
    pub fn new(
        dims: &LatticeDims,
        gates: &EdgeGates,
        options: &BuildOptions,
    ) -> Result<Self, TensorNetError> {
        if dims.window_size() + options.retire_lag > MAX_WINDOW {
            return Err(TensorNetError::WindowTooLarge {
                window: dims.window_size() + options.retire_lag,
                limit: MAX_WINDOW,
            });
        }
        let offsets = dims.offsets();
        for &o in &offsets {
            if !gates.contains_key(&o) {
                return Err(TensorNetError::MissingGate { offset: o });
            }
        }
        if let Some(&o) = gates.keys().find(|o| !offsets.contains(o)) {
            return Err(TensorNetError::UnexpectedGate { offset: o });
        }
        let order = match &options.step_order {
            None => protocol_step_order(dims),
            Some(order) => {
                let mut sorted = order.clone();
                sorted.sort_unstable();
                if sorted != offsets {
                    return Err(TensorNetError::BadStepOrder {
                        order: order.clone(),
                        offsets,
                    });
                }
                order.clone()
            }
        };
        Ok(Self {
            photons: dims.photon_count(),
            max_offset: dims.max_offset(),
            order,
            gates: gates.clone(),
            lag: options.retire_lag,
            step: 0,
            window: ActiveWindow::new(),
        })
    }

    pub fn window(&self) -> &ActiveWindow {
        &self.window
    }

    /// Photons injected so far.
    pub fn steps_done(&self) -> usize {
        self.step
    }

    pub fn is_done(&self) -> bool {
        self.step >= self.photons
    }

    /// Inject the next photon, apply its bonds and emit every photon that no
    /// later gate touches.
    pub fn step(&mut self) -> Vec<SiteTensor> {
        assert!(!self.is_done(), "all photons already injected");
        self.step += 1;
        let k = self.step;
        self.window.push_plus();
        for &o in &self.order {
            if k > o {
                self.window.apply(&self.gates[&o], k - o, k);
            }
        }
        let mut retired = Vec::new();
        while self.window.first() + self.max_offset + self.lag <= k && self.window.n_active() > 1 {
            retired.push(self.window.retire_oldest());
        }
        retired
    }

    /// Emit the remaining active photons.
    pub fn finish(mut self) -> Vec<SiteTensor> {
        let mut out = Vec::with_capacity(self.window.n_active());
        while self.window.n_active() > 0 {
            out.push(self.window.retire_oldest());
        }
        out
    }
}

/// Build the (generally unnormalized) chain state produced by `edge_gates`
/// acting on `|+⟩^⊗K`.
pub fn build_state(
    dims: &LatticeDims,
    edge_gates: &EdgeGates,
) -> Result<SequentialMps, TensorNetError> {
    build_state_with(dims, edge_gates, &BuildOptions::default())
}

pub fn build_state_with(
    dims: &LatticeDims,
    edge_gates: &EdgeGates,
    options: &BuildOptions,
) -> Result<SequentialMps, TensorNetError> {
    let mut builder = SequentialBuilder::new(dims, edge_gates, options)?;
    let mut sites = Vec::with_capacity(dims.photon_count());
    while !builder.is_done() {
        sites.extend(builder.step());
    }
    sites.extend(builder.finish());
    SequentialMps::from_sites(sites)
}

/// Overlap data for the `k`-photon prefix states of two builds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapPoint {
    pub k_photons: usize,
    /// `⟨a|b⟩`
    pub overlap: Complex64,
    pub norm_sqr_a: f64,
    pub norm_sqr_b: f64,
}

/// Run two builds over the same lattice in lockstep and record, after every
/// injected photon, the overlap and norms of the current states.
///
/// Memory stays bounded by the active windows: emitted tensors are folded
/// into the transfer environment immediately.
pub fn overlap_profile(
    dims: &LatticeDims,
    gates_a: &EdgeGates,
    gates_b: &EdgeGates,
) -> Result<Vec<OverlapPoint>, TensorNetError> {
    let options = BuildOptions::default();
    let mut a = SequentialBuilder::new(dims, gates_a, &options)?;
    let mut b = SequentialBuilder::new(dims, gates_b, &options)?;
    let mut env = Mat::<Complex64>::from_fn(1, 1, |_, _| ONE);
    let mut out = Vec::with_capacity(dims.photon_count());
    while !a.is_done() {
        let ra = a.step();
        let rb = b.step();
        for (sa, sb) in ra.iter().zip(&rb) {
            env = transfer(&env, sa, sb);
        }
        out.push(OverlapPoint {
            k_photons: a.steps_done(),
            overlap: a.window().overlap_with(b.window(), &env),
            norm_sqr_a: a.window().block_norm_sqr(),
            norm_sqr_b: b.window().block_norm_sqr(),
        });
    }
    Ok(out)
}

/// Site `k` of the 1D cluster state assembled from CPHASE halves: `|+⟩`
/// followed by the second-qubit half of the `(k-1, k)` split and the
/// first-qubit half of the `(k, k+1)` split.
pub fn peps_site_tensor_1d(k: usize, len: usize) -> Result<SiteTensor, TensorNetError> {
    if k == 0 || k > len {
        return Err(TensorNetError::IndexRange { index: k, len });
    }
    let split = svd_split(&cphase());
    let chi = split.bond_dim();
    let left = if k > 1 { chi } else { 1 };
    let right = if k < len { chi } else { 1 };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut data = vec![ZERO; left * 2 * right];
    for l in 0..left {
        for r in 0..right {
            for out in 0..2 {
                let mut z = ZERO;
                for mid in 0..2 {
                    let a_half = if k < len {
                        split.a(out, mid, r)
                    } else if out == mid {
                        ONE
                    } else {
                        ZERO
                    };
                    let b_half: Complex64 = (0..2)
                        .map(|inp| {
                            let b = if k > 1 {
                                split.b(mid, inp, l)
                            } else if mid == inp {
                                ONE
                            } else {
                                ZERO
                            };
                            b * h
                        })
                        .sum();
                    z += a_half * b_half;
                }
                data[(l * 2 + out) * right + r] = z;
            }
        }
    }
    SiteTensor::new(left, right, data)
}

/// The full 1D cluster state assembled from [`peps_site_tensor_1d`].
pub fn peps_chain_1d(len: usize) -> Result<SequentialMps, TensorNetError> {
    let sites = (1..=len)
        .map(|k| peps_site_tensor_1d(k, len))
        .collect::<Result<Vec<_>, _>>()?;
    SequentialMps::from_sites(sites)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn two_photon_cluster() {
        let dims = LatticeDims::chain(2).unwrap();
        let mps = build_state(&dims, &ideal_gates(&dims)).unwrap();
        let amps = mps.to_dense().unwrap();
        let expected = [c(0.5), c(0.5), c(0.5), c(-0.5)];
        for (a, e) in amps.iter().zip(expected) {
            assert!((a - e).norm() < 1e-14);
        }
    }

    #[test]
    fn ideal_state_is_normalized() {
        let dims = LatticeDims::full(vec![2, 2, 2]).unwrap();
        let mps = build_state(&dims, &ideal_gates(&dims)).unwrap();
        assert!((mps.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(mps.max_bond() <= 1 << dims.max_offset());
    }

    #[test]
    fn inner_product_linearity_and_length_check() {
        let dims = LatticeDims::full(vec![3, 2]).unwrap();
        let a = build_state(&dims, &ideal_gates(&dims)).unwrap();
        let half = a.scaled(c(0.5));
        let lhs = inner_product(&a, &half).unwrap();
        assert!((lhs - 0.5 * inner_product(&a, &a).unwrap()).norm() < 1e-13);

        let short = build_state(
            &LatticeDims::chain(3).unwrap(),
            &ideal_gates(&LatticeDims::chain(3).unwrap()),
        )
        .unwrap();
        assert_eq!(
            inner_product(&a, &short),
            Err(TensorNetError::LengthMismatch { left: 6, right: 3 })
        );
    }

    #[test]
    fn rejects_inconsistent_gate_maps() {
        let dims = LatticeDims::full(vec![2, 3]).unwrap();
        let mut gates = ideal_gates(&dims);
        gates.remove(&2);
        assert_eq!(
            build_state(&dims, &gates).unwrap_err(),
            TensorNetError::MissingGate { offset: 2 }
        );
        let mut gates = ideal_gates(&dims);
        gates.insert(5, cphase());
        assert_eq!(
            build_state(&dims, &gates).unwrap_err(),
            TensorNetError::UnexpectedGate { offset: 5 }
        );
        let options = BuildOptions {
            step_order: Some(vec![1, 1]),
            retire_lag: 0,
        };
        assert!(matches!(
            build_state_with(&dims, &ideal_gates(&dims), &options),
            Err(TensorNetError::BadStepOrder { .. })
        ));
    }

    #[test]
    fn peps_chain_examples() {
        let two = peps_chain_1d(2).unwrap().to_dense().unwrap();
        let expected = [c(0.5), c(0.5), c(0.5), c(-0.5)];
        for (a, e) in two.iter().zip(expected) {
            assert!((a - e).norm() < 1e-14);
        }
        let interior = peps_site_tensor_1d(2, 4).unwrap();
        assert_eq!((interior.left_bond(), interior.right_bond()), (2, 2));
        let single = peps_chain_1d(1).unwrap().to_dense().unwrap();
        assert!((single[0] - c(std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!(peps_site_tensor_1d(5, 4).is_err());
    }

    #[test]
    fn profile_matches_full_builds() {
        let dims = LatticeDims::full(vec![2, 3]).unwrap();
        let u = Gate2Q::diag([c(1.0), c(1.0), c(0.9), Complex64::new(-0.95, 0.1)]);
        let ideal = ideal_gates(&dims);
        let noisy = protocol_gates(&dims, &u);
        let profile = overlap_profile(&dims, &ideal, &noisy).unwrap();
        assert_eq!(profile.len(), 6);
        for point in &profile {
            let d = dims.with_photon_count(point.k_photons).unwrap();
            let a = build_state(&d, &ideal).unwrap();
            let b = build_state(&d, &noisy).unwrap();
            assert!((inner_product(&a, &b).unwrap() - point.overlap).norm() < 1e-12);
            assert!((b.norm_sqr() - point.norm_sqr_b).abs() < 1e-12);
            assert!((a.norm_sqr() - point.norm_sqr_a).abs() < 1e-12);
        }
    }
}
