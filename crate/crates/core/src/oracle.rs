//! Dense state-vector reference simulator.
//!
//! Qubit 0 is the most significant bit of the amplitude index. In protocol
//! states qubit 0 is the ancilla (spin) and qubit `j` is photon `j`.
//!
//! Running the protocol with the ancilla in `|+⟩` leaves the photons and the
//! ancilla in the graph state of the chain bonds plus one extra bond between
//! photon `K` and the ancilla: the ancilla behaves as chain site `K + 1`.
//! [`ancilla_to_end`] makes that relabelling explicit.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::gates::{
    cphase, hadamard, nearest_neighbor_gate, standard_gate, svd_split, Gate2Q, GateError, Mat2,
    StandardGate,
};
use crate::lattice::{chain_edges, EdgeSpec, LatticeDims, LatticeError};
use crate::tensornet::{build_state, ideal_gates, inner_product, protocol_gates, TensorNetError};

/// Largest register the dense simulator accepts.
pub const DENSE_QUBIT_LIMIT: usize = 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{qubits} qubits exceed the dense limit of {limit}")]
    ResourceLimit { qubits: usize, limit: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("qubit {qubit} outside register of {n}")]
    QubitRange { qubit: usize, n: usize },
    #[error("qubit permutation {0:?} is invalid")]
    BadPermutation(Vec<usize>),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    TensorNet(#[from] TensorNetError),
}

fn check_size(qubits: usize) -> Result<(), OracleError> {
    if qubits > DENSE_QUBIT_LIMIT {
        return Err(OracleError::ResourceLimit {
            qubits,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    Ok(())
}

/// Big-endian state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self, OracleError> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(OracleError::NotPowerOfTwo(len));
        }
        let n = len.trailing_zeros() as usize;
        check_size(n)?;
        Ok(Self { n, amps })
    }

    /// `|+⟩^⊗n`
    pub fn plus(n: usize) -> Result<Self, OracleError> {
        check_size(n)?;
        let a = Complex64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        Ok(Self {
            n,
            amps: vec![a; 1 << n],
        })
    }

    /// `|0…0⟩`
    pub fn zeros(n: usize) -> Result<Self, OracleError> {
        check_size(n)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(Self { n, amps })
    }

    /// Normalized state with i.i.d. complex Gaussian amplitudes.
    pub fn random(n: usize, rng: &mut impl rand::Rng) -> Result<Self, OracleError> {
        check_size(n)?;
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|z| *z /= norm);
        Ok(Self { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.n, other.n, "register sizes differ");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩)`
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "register sizes differ");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn diff_norm(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "register sizes differ");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn bit(&self, q: usize) -> Result<usize, OracleError> {
        if q >= self.n {
            return Err(OracleError::QubitRange {
                qubit: q,
                n: self.n,
            });
        }
        Ok(1 << (self.n - 1 - q))
    }

    pub fn apply_1q(&mut self, m: &Mat2, q: usize) -> Result<(), OracleError> {
        let b = self.bit(q)?;
        for x in 0..self.amps.len() {
            if x & b == 0 {
                let (a0, a1) = (self.amps[x], self.amps[x | b]);
                self.amps[x] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[x | b] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Apply `gate` with its first qubit on `first` and second on `second`.
    pub fn apply_2q(
        &mut self,
        gate: &Gate2Q,
        first: usize,
        second: usize,
    ) -> Result<(), OracleError> {
        let (ba, bb) = (self.bit(first)?, self.bit(second)?);
        if ba == bb {
            return Err(OracleError::QubitRange {
                qubit: second,
                n: self.n,
            });
        }
        for x in 0..self.amps.len() {
            if x & (ba | bb) == 0 {
                let idx = [x, x | bb, x | ba, x | ba | bb];
                let v = idx.map(|i| self.amps[i]);
                let out = gate.apply(v);
                for (i, z) in idx.into_iter().zip(out) {
                    self.amps[i] = z;
                }
            }
        }
        Ok(())
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self, OracleError> {
        check_size(self.n + other.n)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self {
            n: self.n + other.n,
            amps,
        })
    }

    /// Reorder qubits so that new qubit `i` is old qubit `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self, OracleError> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true))
        {
            return Err(OracleError::BadPermutation(perm.to_vec()));
        }
        let mut amps = vec![ZERO; self.amps.len()];
        for (x, &a) in self.amps.iter().enumerate() {
            let mut y = 0;
            for (i, &p) in perm.iter().enumerate() {
                if x & (1 << (self.n - 1 - p)) != 0 {
                    y |= 1 << (self.n - 1 - i);
                }
            }
            amps[y] = a;
        }
        Ok(Self { n: self.n, amps })
    }
}

/// Graph state on `k` qubits: CPHASE on every edge applied to `|+⟩^⊗k`.
/// Edges use 1-based chain indices.
pub fn graph_state(edges: &[EdgeSpec], k: usize) -> Result<DenseState, OracleError> {
    let mut state = DenseState::plus(k)?;
    let z = cphase();
    for e in edges {
        state.apply_2q(&z, e.source - 1, e.target - 1)?;
    }
    Ok(state)
}

/// Helical cluster state of a lattice.
pub fn lattice_graph_state(dims: &LatticeDims) -> Result<DenseState, OracleError> {
    graph_state(&chain_edges(dims), dims.photon_count())
}

/// Chain bonds plus the bond between photon `K` and the ancilla, which is
/// listed as site `K + 1`.
pub fn protocol_graph_edges(dims: &LatticeDims) -> Vec<EdgeSpec> {
    let k = dims.photon_count();
    let mut edges = chain_edges(dims);
    edges.push(EdgeSpec {
        source: k,
        target: k + 1,
        offset: 1,
    });
    edges
}

/// Move the ancilla from qubit 0 to the last qubit.
pub fn ancilla_to_end(state: &DenseState) -> Result<DenseState, OracleError> {
    let n = state.n_qubits();
    let perm: Vec<usize> = (1..n).chain(std::iter::once(0)).collect();
    state.permute(&perm)
}

/// How each cycle hands the ancilla's state on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolForm {
    /// Hadamards on ancilla and photon, as implemented physically.
    CircuitForm,
    /// Swap of ancilla and photon.
    CphaseForm,
}

/// Run the ancilla protocol densely on `K + 1` qubits.
///
/// Cycle `k`: photon `k` starts in `|+⟩`; the delayed photons `k - o`
/// (largest offset first) and then photon `k` interact with the ancilla
/// through `spin_photon_gate` (photon as first qubit); finally the ancilla
/// state is handed on by Hadamards or a swap.
pub fn run_protocol_circuit(
    dims: &LatticeDims,
    spin_photon_gate: &Gate2Q,
    form: ProtocolForm,
) -> Result<DenseState, OracleError> {
    let k_total = dims.photon_count();
    let mut state = DenseState::plus(k_total + 1)?;
    let long = dims.long_offsets();
    let h = hadamard();
    let swap = standard_gate(StandardGate::Swap);
    for k in 1..=k_total {
        for &o in long.iter().rev() {
            if k > o {
                state.apply_2q(spin_photon_gate, k - o, 0)?;
            }
        }
        state.apply_2q(spin_photon_gate, k, 0)?;
        match form {
            ProtocolForm::CircuitForm => {
                state.apply_1q(&h, 0)?;
                state.apply_1q(&h, k)?;
            }
            ProtocolForm::CphaseForm => state.apply_2q(&swap, 0, k)?,
        }
    }
    Ok(state)
}

/// Photon-only state obtained by undoing the final photon-ancilla bond.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonExtraction {
    pub state: DenseState,
    /// Norm of the component with the ancilla in `|−⟩`; zero when the
    /// disentangling step is exact.
    pub residual: f64,
}

/// Run the protocol with `u`, then apply `Ũ⁻¹` to (photon `K`, ancilla).
/// The ancilla is left in `|+⟩`, and projecting it out yields the photon
/// chain state generated with `Ũ` on chain bonds and `u` on delayed bonds.
pub fn photon_state_from_protocol(
    dims: &LatticeDims,
    u: &Gate2Q,
) -> Result<PhotonExtraction, OracleError> {
    let k = dims.photon_count();
    let mut state = run_protocol_circuit(dims, u, ProtocolForm::CircuitForm)?;
    state.apply_2q(&nearest_neighbor_gate(u).inverse()?, k, 0)?;
    let half = 1usize << k;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps = state.amps();
    let photons: Vec<Complex64> = (0..half).map(|x| (amps[x] + amps[half + x]) * s).collect();
    let residual = (0..half)
        .map(|x| ((amps[x] - amps[half + x]) * s).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(PhotonExtraction {
        state: DenseState::new(photons)?,
        residual,
    })
}

/// `F0 = |⟨Ψ|Φ⟩|²/⟨Φ|Φ⟩` and `⟨Φ|Φ⟩` from the dense protocol.
pub fn dense_fidelity(dims: &LatticeDims, u: &Gate2Q) -> Result<(f64, f64), OracleError> {
    let phi = photon_state_from_protocol(dims, u)?.state;
    let psi = lattice_graph_state(dims)?;
    let norm = phi.norm_sqr();
    Ok((psi.inner(&phi).norm_sqr() / norm, norm))
}

/// `⟨ψ| X_a ∏_{b∈N(a)} Z_b |ψ⟩` for every vertex `a = 1..=k`.
pub fn stabilizer_check(
    state: &DenseState,
    edges: &[EdgeSpec],
    k: usize,
) -> Result<Vec<f64>, OracleError> {
    let n = state.n_qubits();
    if k > n {
        return Err(OracleError::QubitRange { qubit: k - 1, n });
    }
    let bit = |v: usize| 1usize << (n - v);
    let mut out = Vec::with_capacity(k);
    for a in 1..=k {
        let z_mask = edges
            .iter()
            .filter_map(|e| match (e.source == a, e.target == a) {
                (true, _) => Some(bit(e.target)),
                (_, true) => Some(bit(e.source)),
                _ => None,
            })
            .fold(0usize, |m, b| m ^ b);
        let x_bit = bit(a);
        let amps = state.amps();
        let value: Complex64 = (0..amps.len())
            .map(|x| {
                let sign = if (x & z_mask).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                amps[x ^ x_bit].conj() * amps[x] * sign
            })
            .sum();
        out.push(value.re);
    }
    Ok(out)
}

/// Outcome of one oracle identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Report {
    fn new(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: max_error < tolerance,
            max_error,
            tolerance,
        }
    }
}

/// Which state the photon starts in when testing the swap/Hadamard relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonInput {
    Plus,
    Zero,
}

/// Compare `S_{A,k} Z_{A,k}` with `(H_A ⊗ H_k) Z_{A,k}` on random
/// ancilla-plus-environment states. The relation needs the photon in `|+⟩`;
/// [`PhotonInput::Zero`] is the negative control and should fail.
pub fn check_swap_relation(
    trials: usize,
    seed: u64,
    photon: PhotonInput,
) -> Result<Report, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let photon_state = match photon {
        PhotonInput::Plus => DenseState::plus(1)?,
        PhotonInput::Zero => DenseState::zeros(1)?,
    };
    let (z, swap, h) = (cphase(), standard_gate(StandardGate::Swap), hadamard());
    let mut worst: f64 = 0.0;
    // qubits: ancilla, environment 1, environment 2, photon
    for trial in 0..trials {
        let joint = if trial == 0 {
            DenseState::zeros(3)?
        } else {
            DenseState::random(3, &mut rng)?
        };
        let start = joint.tensor(&photon_state)?;
        let mut lhs = start.clone();
        lhs.apply_2q(&z, 0, 3)?;
        lhs.apply_2q(&swap, 0, 3)?;
        let mut rhs = start;
        rhs.apply_2q(&z, 0, 3)?;
        rhs.apply_1q(&h, 0)?;
        rhs.apply_1q(&h, 3)?;
        worst = worst.max(lhs.diff_norm(&rhs));
    }
    let name = match photon {
        PhotonInput::Plus => "swap/hadamard relation",
        PhotonInput::Zero => "swap/hadamard relation, photon in |0⟩",
    };
    Ok(Report::new(name, worst, 1e-12))
}

/// Compare the per-cycle operator written with the spin-photon gate,
/// `(H_s ⊗ H_k) U_{s,k} U_{s,k-o₁} U_{s,k-o₂}…`, with its photon-photon
/// form `Ũ_{s,k} U_{k,k-o₁} … S_{s,k}` on random states where photon `k`
/// is in `|+⟩`.
pub fn check_gate_reduction(
    dims: &LatticeDims,
    u: &Gate2Q,
    trials: usize,
    seed: u64,
) -> Result<Report, OracleError> {
    let long = dims.long_offsets();
    // qubits: spin, photon k, one delayed photon per long offset, environment
    let n_rest = long.len() + 2;
    let (s, k) = (0usize, n_rest);
    let delayed = |i: usize| 1 + i;
    let u_tilde = nearest_neighbor_gate(u);
    let swap = standard_gate(StandardGate::Swap);
    let h = hadamard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let start = DenseState::random(n_rest, &mut rng)?.tensor(&DenseState::plus(1)?)?;

        let mut lhs = start.clone();
        for i in (0..long.len()).rev() {
            lhs.apply_2q(u, delayed(i), s)?;
        }
        lhs.apply_2q(u, k, s)?;
        lhs.apply_1q(&h, s)?;
        lhs.apply_1q(&h, k)?;

        let mut rhs = start;
        rhs.apply_2q(&swap, s, k)?;
        for i in (0..long.len()).rev() {
            rhs.apply_2q(u, delayed(i), k)?;
        }
        rhs.apply_2q(&u_tilde, k, s)?;

        worst = worst.max(lhs.diff_norm(&rhs));
    }
    Ok(Report::new(
        format!("photon-photon gate reduction {:?}", dims.dims()),
        worst,
        1e-12,
    ))
}

/// Sequential MPS built from the photon-photon gates against the dense
/// ancilla protocol: maximum amplitude difference.
pub fn compare_with_tensornet(
    dims: &LatticeDims,
    u: &Gate2Q,
    tolerance: f64,
) -> Result<Report, OracleError> {
    let dense = photon_state_from_protocol(dims, u)?;
    let mps = build_state(dims, &protocol_gates(dims, u))?;
    let amps = DenseState::new(mps.to_dense()?)?;
    let err = amps.max_abs_diff(&dense.state).max(dense.residual);
    Ok(Report::new(
        format!("tensor network vs dense protocol {:?}", dims.dims()),
        err,
        tolerance,
    ))
}

/// Hadamard form against swap form with ideal gates, plus the relabelled
/// result against the graph state.
pub fn check_protocol_forms(dims: &LatticeDims) -> Result<Vec<Report>, OracleError> {
    let z = cphase();
    let circuit = run_protocol_circuit(dims, &z, ProtocolForm::CircuitForm)?;
    let swapped = run_protocol_circuit(dims, &z, ProtocolForm::CphaseForm)?;
    let graph = graph_state(&protocol_graph_edges(dims), dims.photon_count() + 1)?;
    let relabelled = ancilla_to_end(&circuit)?;
    Ok(vec![
        Report::new(
            format!("hadamard form = swap form {:?}", dims.dims()),
            1.0 - circuit.fidelity(&swapped),
            1e-12,
        ),
        Report::new(
            format!("protocol output = graph state {:?}", dims.dims()),
            1.0 - relabelled.fidelity(&graph),
            1e-12,
        ),
    ])
}

/// Stabilizers of the ideal protocol output, and the effect of one Z error.
pub fn check_stabilizers(
    dims: &LatticeDims,
    flipped_photon: usize,
) -> Result<Vec<Report>, OracleError> {
    let k = dims.photon_count();
    let edges = protocol_graph_edges(dims);
    let state = ancilla_to_end(&run_protocol_circuit(
        dims,
        &cphase(),
        ProtocolForm::CircuitForm,
    )?)?;
    let values = stabilizer_check(&state, &edges, k + 1)?;
    let ideal_err = values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);

    let mut flipped = state.clone();
    let z = [[ONE, ZERO], [ZERO, -ONE]];
    flipped.apply_1q(&z, flipped_photon - 1)?;
    let values = stabilizer_check(&flipped, &edges, k + 1)?;
    // Z on photon j anticommutes only with the stabilizer carrying X_j
    let touching: Vec<bool> = (1..=k + 1).map(|a| a == flipped_photon).collect();
    let flip_err = values
        .iter()
        .zip(&touching)
        .map(|(v, &t)| (v - if t { -1.0 } else { 1.0 }).abs())
        .fold(0.0, f64::max);
    let overlap = state.inner(&flipped).norm();

    let mut bit_flipped = state.clone();
    bit_flipped.apply_1q(&[[ZERO, ONE], [ONE, ZERO]], flipped_photon - 1)?;
    let values = stabilizer_check(&bit_flipped, &edges, k + 1)?;
    let neighbour = |a: usize| {
        edges.iter().any(|e| {
            (e.source, e.target) == (a, flipped_photon)
                || (e.target, e.source) == (a, flipped_photon)
        })
    };
    let x_err = values
        .iter()
        .enumerate()
        .map(|(i, v)| (v - if neighbour(i + 1) { -1.0 } else { 1.0 }).abs())
        .fold(0.0, f64::max);
    Ok(vec![
        Report::new(
            format!("stabilizers of ideal output {:?}", dims.dims()),
            ideal_err,
            1e-10,
        ),
        Report::new(
            format!("Z error flips its own stabilizer only {:?}", dims.dims()),
            flip_err,
            1e-10,
        ),
        Report::new(
            format!(
                "X error flips the neighbouring stabilizers {:?}",
                dims.dims()
            ),
            x_err,
            1e-10,
        ),
        Report::new(
            format!("Z error gives orthogonal state {:?}", dims.dims()),
            overlap,
            1e-12,
        ),
    ])
}

/// Random gates split by SVD and contracted back, plus the CPHASE spectrum.
pub fn check_svd_split(trials: usize, seed: u64) -> Vec<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let mut rows = [[ZERO; 4]; 4];
        for z in rows.iter_mut().flatten() {
            *z = Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            );
        }
        let g = Gate2Q::from_rows(rows);
        worst = worst.max(svd_split(&g).contract().max_abs_diff(&g));
    }
    let z = svd_split(&cphase());
    let spectrum_err = if z.bond_dim() == 2 {
        z.singular_values
            .iter()
            .map(|s| (s - std::f64::consts::SQRT_2).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    vec![
        Report::new("gate split reconstruction", worst, 1e-12),
        Report::new(
            "CPHASE split has rank 2 with values sqrt 2",
            spectrum_err,
            1e-12,
        ),
    ]
}

/// `F0` from the tensor network against `F0` from the dense protocol.
pub fn compare_fidelity(
    dims: &LatticeDims,
    u: &Gate2Q,
    label: &str,
) -> Result<Report, OracleError> {
    let (dense_f0, _) = dense_fidelity(dims, u)?;
    let ideal = build_state(dims, &ideal_gates(dims))?;
    let generated = build_state(dims, &protocol_gates(dims, u))?;
    let overlap = inner_product(&ideal, &generated)?;
    let net_f0 = overlap.norm_sqr() / generated.norm_sqr();
    Ok(Report::new(
        format!("F0 tensor network = dense, {label} {:?}", dims.dims()),
        (net_f0 - dense_f0).abs(),
        1e-9,
    ))
}

/// Lattices exercised by [`identity_suite`].
pub fn suite_lattices() -> Vec<LatticeDims> {
    [
        vec![4],
        vec![6],
        vec![2, 3],
        vec![3, 2],
        vec![2, 2, 2],
        vec![2, 2, 3],
    ]
    .into_iter()
    .map(|d| LatticeDims::full(d).expect("fixed lattices are valid"))
    .collect()
}

/// Every dense identity: protocol forms, the swap/Hadamard relation and its
/// negative control, the photon-photon gate reduction, gate splitting,
/// tensor network agreement and stabilizers.
pub fn identity_suite(imperfect: &Gate2Q, seed: u64) -> Result<Vec<Report>, OracleError> {
    let mut out = Vec::new();
    let lattices = suite_lattices();
    for dims in &lattices {
        out.extend(check_protocol_forms(dims)?);
    }
    out.push(check_swap_relation(100, seed, PhotonInput::Plus)?);
    let control = check_swap_relation(100, seed, PhotonInput::Zero)?;
    out.push(Report {
        name: "negative control: relation fails for photon in |0⟩".into(),
        passed: !control.passed,
        max_error: control.max_error,
        tolerance: control.tolerance,
    });
    for dims in &lattices {
        out.push(check_gate_reduction(dims, imperfect, 20, seed)?);
    }
    out.extend(check_svd_split(100, seed));
    for dims in &lattices {
        out.push(compare_fidelity(dims, &cphase(), "ideal")?);
        out.push(compare_fidelity(dims, imperfect, "imperfect")?);
    }
    out.push(compare_with_tensornet(
        &LatticeDims::full(vec![2, 2, 2])?,
        imperfect,
        1e-10,
    )?);
    for dims in &lattices {
        out.extend(check_stabilizers(dims, dims.photon_count().div_ceil(2))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::ReflectionPair;
    use crate::gates::u_rf;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn graph_state_examples() {
        let single = graph_state(&[], 1).unwrap();
        assert!((single.amps()[0] - c(std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-15);
        let path = LatticeDims::chain(3).unwrap();
        let state = lattice_graph_state(&path).unwrap();
        let values = stabilizer_check(&state, &chain_edges(&path), 3).unwrap();
        assert!(values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(matches!(
            graph_state(&[], DENSE_QUBIT_LIMIT + 1),
            Err(OracleError::ResourceLimit { .. })
        ));
    }

    #[test]
    fn permutation_moves_qubits() {
        // |10⟩ → |01⟩
        let s = DenseState::new(vec![ZERO, ZERO, ONE, ZERO]).unwrap();
        let p = s.permute(&[1, 0]).unwrap();
        assert_eq!(p.amps()[1], ONE);
        assert!(s.permute(&[0, 0]).is_err());
    }

    #[test]
    fn protocol_forms_agree_on_path() {
        for r in check_protocol_forms(&LatticeDims::chain(4).unwrap()).unwrap() {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn relation_holds_only_for_plus() {
        assert!(
            check_swap_relation(20, 1, PhotonInput::Plus)
                .unwrap()
                .passed
        );
        assert!(
            !check_swap_relation(20, 1, PhotonInput::Zero)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn reduction_with_real_reflection_pair() {
        let u = u_rf(&ReflectionPair::new(c(0.94), c(-0.9)));
        let dims = LatticeDims::full(vec![2, 2, 2]).unwrap();
        assert!(check_gate_reduction(&dims, &u, 10, 3).unwrap().passed);
        assert!(check_gate_reduction(&dims, &cphase(), 3, 3).unwrap().passed);
    }

    #[test]
    fn extraction_is_exact() {
        let u = u_rf(&ReflectionPair::new(c(0.94), Complex64::new(-0.9, 0.2)));
        let dims = LatticeDims::full(vec![2, 3]).unwrap();
        let ex = photon_state_from_protocol(&dims, &u).unwrap();
        assert!(ex.residual < 1e-13);
        assert!(compare_with_tensornet(&dims, &u, 1e-12).unwrap().passed);
    }

    #[test]
    fn scaled_cphase_norm_bookkeeping() {
        // every gate is 0.9·CPHASE, so the norm is 0.81 per applied gate
        let dims = LatticeDims::full(vec![2, 3]).unwrap();
        let u = cphase().scale(c(0.9));
        let state = run_protocol_circuit(&dims, &u, ProtocolForm::CircuitForm).unwrap();
        let gates =
            chain_edges(&dims).iter().filter(|e| e.offset != 1).count() + dims.photon_count();
        assert!((state.norm_sqr() - 0.81f64.powi(gates as i32)).abs() < 1e-12);
    }

    #[test]
    fn stabilizer_suite_small() {
        for r in check_stabilizers(&LatticeDims::full(vec![2, 2]).unwrap(), 2).unwrap() {
            assert!(r.passed, "{r:?}");
        }
    }
}
