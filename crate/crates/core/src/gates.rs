//! Two-qubit operators used by the generation protocol.
//!
//! Basis ordering is `|x⟩_first ⊗ |y⟩_second` with index `2x + y`. For
//! spin-photon gates the photon is the first qubit and the spin the second.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;
use num_complex::Complex64;
use thiserror::Error;

/// Singular values at or below this are treated as zero when splitting a gate.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

/// Single-qubit operator, `[row][column]`.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("unknown gate `{0}` (expected cphase, hadamard_pair, swap or identity)")]
    UnknownGate(String),
    #[error("gate is singular and has no inverse")]
    Singular,
}

pub fn hadamard() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Phase gate `diag(1, i)`.
pub fn phase_s() -> Mat2 {
    [[ONE, ZERO], [ZERO, I]]
}

/// A 4×4 complex operator on an ordered pair of qubits. Not necessarily
/// unitary.
#[derive(Clone, Copy, PartialEq)]
pub struct Gate2Q {
    m: [[Complex64; 4]; 4],
}

impl fmt::Debug for Gate2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gate2Q [")?;
        for row in &self.m {
            write!(f, "   ")?;
            for z in row {
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Gate2Q {
    pub fn from_rows(m: [[Complex64; 4]; 4]) -> Self {
        Self { m }
    }

    pub fn zero() -> Self {
        Self { m: [[ZERO; 4]; 4] }
    }

    pub fn identity() -> Self {
        Self::diag([ONE; 4])
    }

    pub fn diag(d: [Complex64; 4]) -> Self {
        let mut g = Self::zero();
        for (i, z) in d.into_iter().enumerate() {
            g.m[i][i] = z;
        }
        g
    }

    /// `a ⊗ b` with `a` on the first qubit.
    pub fn kron(a: &Mat2, b: &Mat2) -> Self {
        let mut g = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                g.m[r][c] = a[r >> 1][c >> 1] * b[r & 1][c & 1];
            }
        }
        g
    }

    pub fn rows(&self) -> &[[Complex64; 4]; 4] {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn diagonal(&self) -> [Complex64; 4] {
        [self.m[0][0], self.m[1][1], self.m[2][2], self.m[3][3]]
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..4).all(|r| (0..4).all(|c| r == c || self.m[r][c].norm() <= tol))
    }

    pub fn adjoint(&self) -> Self {
        let mut g = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                g.m[r][c] = self.m[c][r].conj();
            }
        }
        g
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut g = *self;
        g.m.iter_mut().flatten().for_each(|z| *z *= s);
        g
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut g = *self;
        for r in 0..4 {
            for c in 0..4 {
                g.m[r][c] += other.m[r][c];
            }
        }
        g
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    /// Same operator with the roles of the two qubits exchanged.
    pub fn swap_qubits(&self) -> Self {
        let sw = |i: usize| ((i & 1) << 1) | (i >> 1);
        let mut g = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                g.m[sw(r)][sw(c)] = self.m[r][c];
            }
        }
        g
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Distance after removing the best global phase:
    /// `min_φ max |e^{iφ} self - other|`, with φ taken from the overlap.
    pub fn phase_aligned_diff(&self, other: &Self) -> f64 {
        let overlap: Complex64 = self
            .m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| a.conj() * b)
            .sum();
        if overlap.norm() == 0.0 {
            return self.max_abs_diff(other);
        }
        let phase = overlap / overlap.norm();
        self.scale(phase).max_abs_diff(other)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        let svd = self
            .to_faer()
            .thin_svd()
            .expect("SVD of a finite 4x4 matrix converges");
        svd.S().column_vector()[0].re
    }

    pub fn inverse(&self) -> Result<Self, GateError> {
        let lu = self.to_faer().partial_piv_lu();
        let inv = lu.inverse();
        let g = Self::from_faer(&inv);
        if g.m.iter().flatten().any(|z| !z.is_finite())
            || (*self * g).max_abs_diff(&Self::identity()) > 1e-9
        {
            return Err(GateError::Singular);
        }
        Ok(g)
    }

    pub fn apply(&self, v: [Complex64; 4]) -> [Complex64; 4] {
        let mut out = [ZERO; 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| self.m[r][c] * v[c]).sum();
        }
        out
    }

    fn to_faer(&self) -> Mat<Complex64> {
        Mat::from_fn(4, 4, |r, c| self.m[r][c])
    }

    fn from_faer(m: &Mat<Complex64>) -> Self {
        let mut g = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                g.m[r][c] = m[(r, c)];
            }
        }
        g
    }
}

impl Mul for Gate2Q {
    type Output = Gate2Q;

    fn mul(self, rhs: Gate2Q) -> Gate2Q {
        let mut g = Gate2Q::zero();
        for r in 0..4 {
            for c in 0..4 {
                g.m[r][c] = (0..4).map(|k| self.m[r][k] * rhs.m[k][c]).sum();
            }
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardGate {
    Cphase,
    HadamardPair,
    Swap,
    Identity,
}

impl FromStr for StandardGate {
    type Err = GateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cphase" => Ok(Self::Cphase),
            "hadamard_pair" => Ok(Self::HadamardPair),
            "swap" => Ok(Self::Swap),
            "identity" => Ok(Self::Identity),
            other => Err(GateError::UnknownGate(other.to_string())),
        }
    }
}

pub fn standard_gate(name: StandardGate) -> Gate2Q {
    match name {
        StandardGate::Cphase => Gate2Q::diag([ONE, ONE, ONE, -ONE]),
        StandardGate::HadamardPair => Gate2Q::kron(&hadamard(), &hadamard()),
        StandardGate::Swap => {
            let mut g = Gate2Q::zero();
            g.m[0][0] = ONE;
            g.m[1][2] = ONE;
            g.m[2][1] = ONE;
            g.m[3][3] = ONE;
            g
        }
        StandardGate::Identity => Gate2Q::identity(),
    }
}

pub fn cphase() -> Gate2Q {
    standard_gate(StandardGate::Cphase)
}

/// Spin-photon reflection operator `diag(1, 1, r_up, r_down)` on
/// `|photon⟩ ⊗ |spin⟩`.
pub fn u_rf(r: &crate::cavity::ReflectionPair) -> Gate2Q {
    Gate2Q::diag([ONE, ONE, r.r_up, r.r_down])
}

/// Chiral-coupling reflection operator `diag(r1, -1, -1, r1)`.
pub fn u_cr(r1: Complex64) -> Gate2Q {
    Gate2Q::diag([r1, -ONE, -ONE, r1])
}

/// Left-multiplies by `S ⊗ S` (`diag(1, i, i, -1)`), which turns
/// `u_cr(-i)` into a CPHASE up to the global phase `-i`.
pub fn chiral_phase_fix(u: &Gate2Q) -> Gate2Q {
    Gate2Q::kron(&phase_s(), &phase_s()) * *u
}

/// Decomposition `U = (I + εR) Z` of an imperfect CPHASE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSplit {
    /// Spectral norm of `UZ - I`.
    pub epsilon: f64,
    /// `(UZ - I)/ε`, or zero when ε = 0.
    pub r_tensor: Gate2Q,
}

impl ErrorSplit {
    pub fn reconstruct(&self) -> Gate2Q {
        Gate2Q::identity().add(&self.r_tensor.scale(Complex64::new(self.epsilon, 0.0))) * cphase()
    }
}

pub fn error_split(u: &Gate2Q) -> ErrorSplit {
    let deviation = (*u * cphase()).sub(&Gate2Q::identity());
    let epsilon = deviation.spectral_norm();
    let r_tensor = if epsilon > 0.0 {
        deviation.scale(Complex64::new(1.0 / epsilon, 0.0))
    } else {
        Gate2Q::zero()
    };
    ErrorSplit { epsilon, r_tensor }
}

/// Effective photon-photon gate between chain neighbours,
/// `[I + ε (H⊗H) R (H⊗H)] Z = (H⊗H)(UZ)(H⊗H) Z`.
pub fn nearest_neighbor_gate(u: &Gate2Q) -> Gate2Q {
    let hh = standard_gate(StandardGate::HadamardPair);
    hh * (*u * cphase()) * hh * cphase()
}

/// Operator-Schmidt form `G = Σ_s A_s ⊗ B_s` of a two-qubit gate.
///
/// `tensor_a[s][out][in]` acts on the first qubit, `tensor_b[s][out][in]` on
/// the second.
#[derive(Debug, Clone, PartialEq)]
pub struct GateTensorPair {
    pub tensor_a: Vec<Mat2>,
    pub tensor_b: Vec<Mat2>,
    pub singular_values: Vec<f64>,
}

impl GateTensorPair {
    pub fn bond_dim(&self) -> usize {
        self.singular_values.len()
    }

    pub fn a(&self, out: usize, inp: usize, s: usize) -> Complex64 {
        self.tensor_a[s][out][inp]
    }

    pub fn b(&self, out: usize, inp: usize, s: usize) -> Complex64 {
        self.tensor_b[s][out][inp]
    }

    /// Contract over the bond index.
    pub fn contract(&self) -> Gate2Q {
        self.tensor_a
            .iter()
            .zip(&self.tensor_b)
            .fold(Gate2Q::zero(), |acc, (a, b)| acc.add(&Gate2Q::kron(a, b)))
    }
}

/// Split a gate by SVD of its partial transpose: rows `(α'α)` from the first
/// qubit, columns `(β'β)` from the second.
pub fn svd_split(u: &Gate2Q) -> GateTensorPair {
    // u[(α'β'), (αβ)] -> m[(α'α), (β'β)]
    let m = Mat::from_fn(4, 4, |row, col| {
        let (ap, a) = (row >> 1, row & 1);
        let (bp, b) = (col >> 1, col & 1);
        u.m[2 * ap + bp][2 * a + b]
    });
    let svd = m.thin_svd().expect("SVD of a finite 4x4 matrix converges");
    let (uu, ss, vv) = (svd.U(), svd.S().column_vector(), svd.V());

    let mut pair = GateTensorPair {
        tensor_a: Vec::new(),
        tensor_b: Vec::new(),
        singular_values: Vec::new(),
    };
    for s in 0..4 {
        let sigma = ss[s].re;
        if sigma <= SCHMIDT_CUTOFF {
            continue;
        }
        let root = sigma.sqrt();
        let mut a = [[ZERO; 2]; 2];
        let mut b = [[ZERO; 2]; 2];
        for idx in 0..4 {
            a[idx >> 1][idx & 1] = uu[(idx, s)] * root;
            b[idx >> 1][idx & 1] = vv[(idx, s)].conj() * root;
        }
        pair.tensor_a.push(a);
        pair.tensor_b.push(b);
        pair.singular_values.push(sigma);
    }
    pair
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::ReflectionPair;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_diag(d: [f64; 4]) -> Gate2Q {
        Gate2Q::diag(d.map(|x| c(x, 0.0)))
    }

    #[test]
    fn standard_gate_examples() {
        let z = cphase();
        assert_eq!(z.apply([ZERO, ZERO, ZERO, ONE]), [ZERO, ZERO, ZERO, -ONE]);
        let sw = standard_gate(StandardGate::Swap);
        assert_eq!(sw * sw, Gate2Q::identity());
        let hh = standard_gate(StandardGate::HadamardPair);
        assert!((hh * hh).max_abs_diff(&Gate2Q::identity()) < 1e-15);
        assert_eq!(standard_gate(StandardGate::Identity), Gate2Q::identity());
        assert_eq!("swap".parse::<StandardGate>(), Ok(StandardGate::Swap));
        assert_eq!(
            "toffoli".parse::<StandardGate>(),
            Err(GateError::UnknownGate("toffoli".into()))
        );
    }

    #[test]
    fn reflection_gate_examples() {
        assert_eq!(u_rf(&ReflectionPair::ideal()), cphase());
        let r = ReflectionPair::new(c(0.9418, 0.0), c(-0.91, 0.09));
        assert_eq!(
            u_rf(&r),
            Gate2Q::diag([ONE, ONE, c(0.9418, 0.0), c(-0.91, 0.09)])
        );
        assert_eq!(u_rf(&ReflectionPair::new(ONE, ONE)), Gate2Q::identity());
    }

    #[test]
    fn chiral_gate_examples() {
        assert_eq!(u_cr(-I), Gate2Q::diag([-I, -ONE, -ONE, -I]));
        assert_eq!(u_cr(-ONE), Gate2Q::identity().scale(-ONE));

        let fixed = chiral_phase_fix(&u_cr(-I));
        assert!(fixed.max_abs_diff(&cphase().scale(-I)) < 1e-15);
        assert!(fixed.phase_aligned_diff(&cphase()) < 1e-12);

        assert_eq!(
            chiral_phase_fix(&Gate2Q::identity()),
            Gate2Q::diag([ONE, I, I, -ONE])
        );

        let a = 0.9900495037128094;
        let fixed = chiral_phase_fix(&u_cr(c(0.0, -a)));
        let expected = real_diag([a, 1.0, 1.0, -a]).scale(-I);
        assert!(fixed.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn error_split_examples() {
        assert_eq!(error_split(&cphase()).epsilon, 0.0);

        let u = real_diag([1.0, 1.0, 0.94, -0.9]);
        let split = error_split(&u);
        assert_relative_eq!(split.epsilon, 0.1, max_relative = 1e-12);
        let er = split.r_tensor.scale(c(split.epsilon, 0.0));
        assert!(er.max_abs_diff(&real_diag([0.0, 0.0, -0.06, -0.1])) < 1e-14);

        let split = error_split(&Gate2Q::identity());
        assert_relative_eq!(split.epsilon, 2.0, max_relative = 1e-12);
        assert!(split.reconstruct().max_abs_diff(&Gate2Q::identity()) < 1e-14);
    }

    #[test]
    fn nearest_neighbor_examples() {
        assert!(nearest_neighbor_gate(&cphase()).max_abs_diff(&cphase()) < 1e-15);
        assert!(
            nearest_neighbor_gate(&u_rf(&ReflectionPair::ideal())).max_abs_diff(&cphase()) < 1e-15
        );

        let ut = nearest_neighbor_gate(&real_diag([1.0, 1.0, 0.94, -0.9]));
        #[rustfmt::skip]
        let expected = [
            [ 0.96,  0.01,  0.04,  0.01],
            [ 0.01,  0.96, -0.01, -0.04],
            [ 0.04, -0.01,  0.96, -0.01],
            [-0.01,  0.04,  0.01, -0.96],
        ];
        let expected = Gate2Q::from_rows(expected.map(|row| row.map(|x| c(x, 0.0))));
        assert!(ut.max_abs_diff(&expected) < 1e-14);
        assert!(!ut.is_diagonal(1e-6));

        // agrees with the [I + ε(H⊗H)R(H⊗H)]Z form
        let split = error_split(&real_diag([1.0, 1.0, 0.94, -0.9]));
        let hh = standard_gate(StandardGate::HadamardPair);
        let conj = hh * split.r_tensor * hh;
        let other = Gate2Q::identity().add(&conj.scale(c(split.epsilon, 0.0))) * cphase();
        assert!(other.max_abs_diff(&ut) < 1e-14);
    }

    #[test]
    fn svd_split_examples() {
        let z = svd_split(&cphase());
        assert_eq!(z.bond_dim(), 2);
        for s in &z.singular_values {
            assert_relative_eq!(*s, std::f64::consts::SQRT_2, max_relative = 1e-12);
        }
        assert!(z.contract().max_abs_diff(&cphase()) < 1e-12);

        let id = svd_split(&Gate2Q::identity());
        assert_eq!(id.bond_dim(), 1);
        assert_relative_eq!(id.singular_values[0], 2.0, max_relative = 1e-12);

        let ut = nearest_neighbor_gate(&real_diag([1.0, 1.0, 0.94, -0.9]));
        let split = svd_split(&ut);
        assert!(split.bond_dim() <= 4);
        assert!(split.contract().max_abs_diff(&ut) < 1e-12);
        let expected = [
            1.3588904973295726,
            1.3588904973295723,
            0.01471788936584883,
            0.01471788936584883,
        ];
        for (s, e) in split.singular_values.iter().zip(expected) {
            assert_relative_eq!(*s, e, max_relative = 1e-10);
        }
    }

    #[test]
    fn swap_qubits_and_inverse() {
        let u = real_diag([1.0, 0.5, 0.25, 2.0]);
        assert_eq!(u.swap_qubits(), real_diag([1.0, 0.25, 0.5, 2.0]));
        let inv = u.inverse().unwrap();
        assert!((u * inv).max_abs_diff(&Gate2Q::identity()) < 1e-14);
        assert_eq!(Gate2Q::zero().inverse(), Err(GateError::Singular));
    }
}
