//! Random states and random CPTP maps, mainly for property tests and
//! exploration.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::dynmap::{AMap, DensityMatrix};
use crate::linalg::{self, dagger, eig_hermitian, kron, ComplexMatrix};
use crate::qubitpair::TwoQubitState;

/// Square matrix with independent standard complex Gaussian entries.
pub fn random_ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    Array2::from_shape_fn((n, n), |_| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random full-rank density matrix G G^dag / Tr[G G^dag] (Hilbert-Schmidt
/// ensemble).
pub fn random_density_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    loop {
        let g = random_ginibre(n, rng);
        let m = g.dot(&dagger(&g));
        let tr = linalg::mat_trace(&m).re;
        if tr > 1e-9 {
            return DensityMatrix::new(m.mapv(|z| z / tr))
                .expect("G G^dag normalized by its trace is a state");
        }
    }
}

/// Random joint state of two qubits.
pub fn random_two_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    TwoQubitState::new(random_density_matrix(4, rng)).expect("4x4 by construction")
}

/// Random CPTP map built from `kraus_count` Kraus operators: Ginibre
/// matrices G_i are whitened by (sum_i G_i^dag G_i)^{-1/2} so that
/// sum_i K_i^dag K_i = I, and the map matrix is sum_i K_i (x) K_i^*.
pub fn random_cptp_amap<R: Rng + ?Sized>(n: usize, kraus_count: usize, rng: &mut R) -> AMap {
    assert!(kraus_count > 0, "need at least one Kraus operator");
    loop {
        let gs: Vec<ComplexMatrix> = (0..kraus_count).map(|_| random_ginibre(n, rng)).collect();
        let mut gram = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
        for g in &gs {
            gram = gram + dagger(g).dot(g);
        }
        let eig = eig_hermitian(&gram).expect("gram matrix is hermitian");
        if eig.eigenvalues.iter().any(|&l| l < 1e-9) {
            continue; // singular draw, retry
        }
        let mut inv_sqrt = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
        for (mu, &lam) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(mu);
            let w = Complex64::new(1.0 / lam.sqrt(), 0.0);
            for i in 0..n {
                for j in 0..n {
                    inv_sqrt[[i, j]] += w * v[i] * v[j].conj();
                }
            }
        }
        let n2 = n * n;
        let mut matrix = Array2::from_elem((n2, n2), Complex64::new(0.0, 0.0));
        for g in &gs {
            let k = g.dot(&inv_sqrt);
            matrix = matrix + kron(&k, &k.mapv(|z| z.conj()));
        }
        return AMap::new(matrix).expect("Kraus construction yields a valid map");
    }
}
