//! Complete biorthonormal eigensystems.
//!
//! A square matrix `H` that admits a complete biorthonormal eigensystem has
//! paired right eigenvectors `psi_k` (of `H`) and left eigenvectors `phi_k`
//! (right eigenvectors of `H^H` with conjugate eigenvalue) satisfying
//! `<phi_m|psi_n> = delta_mn` and `sum_n |psi_n><phi_n| = I`. Matrices for
//! which this fails at working precision (coalesced eigenvectors) are
//! rejected with `DefectiveMatrix` rather than approximated.

use num_complex::Complex64;

use crate::eigen::{eigenpair_residual, general_eigendecomposition};
use crate::error::Error;
use crate::matrix::ComplexMatrix;

/// Default relative tolerance for clustering eigenvalues into degenerate
/// groups before block biorthonormalization.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

/// Relative bound on the distance between a left eigenvalue and the conjugate
/// of its matched right eigenvalue; a worse match means the two spectra do
/// not correspond and the system is treated as defective.
const LEFT_RIGHT_MATCH_TOLERANCE: f64 = 1e-6;

/// Eigenvalues with paired right/left eigenvector matrices.
///
/// Column `k` of `right_matrix` is `psi_k` (unit 2-norm); column `k` of
/// `left_matrix` is `phi_k`, carrying whatever scale `<phi_k|psi_k> = 1`
/// requires. Eigenvalues are sorted by `(re, im)` ascending.
#[derive(Debug, Clone)]
pub struct BiorthonormalSystem {
    pub eigenvalues: Vec<Complex64>,
    pub right_matrix: ComplexMatrix,
    pub left_matrix: ComplexMatrix,
    pub biorthogonality_residual: f64,
    pub completeness_residual: f64,
}

impl BiorthonormalSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// All four residuals of a system against its matrix, recomputed from scratch.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemResiduals {
    pub eig_residual_right: f64,
    pub eig_residual_left: f64,
    pub biorth_residual: f64,
    pub completeness_residual: f64,
}

/// Builds the complete biorthonormal eigensystem of `h`.
///
/// Right vectors come from the eigendecomposition of `h`, left vectors from
/// the eigendecomposition of `h.adjoint()` with eigenvalues matched by
/// conjugation; degenerate clusters are then jointly rescaled so the Gram
/// block `Phi_g^H Psi_g` becomes the identity. Fails with `DefectiveMatrix`
/// when matching or biorthonormalization cannot succeed at tolerance `tol`.
pub fn decompose(h: &ComplexMatrix, tol: f64) -> Result<BiorthonormalSystem, Error> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            left: (h.rows(), h.cols()),
            right: (h.rows(), h.rows()),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let n = h.rows();
    let h_norm = h.frobenius_norm();

    let right = general_eigendecomposition(h, tol)?;
    let left = general_eigendecomposition(&h.adjoint(), tol)?;

    // Greedy assignment: left eigenvalue closest to conj(right eigenvalue).
    let mut used = vec![false; n];
    let mut left_matrix = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let target = right.eigenvalues[k].conj();
        let mut best: Option<(usize, f64)> = None;
        for (j, &mu) in left.eigenvalues.iter().enumerate() {
            if used[j] {
                continue;
            }
            let dist = (mu - target).norm();
            if best.map_or(true, |(_, d)| dist < d) {
                best = Some((j, dist));
            }
        }
        let (j, dist) = best.expect("one left eigenvalue per right eigenvalue");
        if dist > LEFT_RIGHT_MATCH_TOLERANCE * h_norm {
            return Err(Error::DefectiveMatrix(format!(
                "left/right eigenvalue mismatch {dist:.3e} at index {k}"
            )));
        }
        used[j] = true;
        left_matrix.set_column(k, &left.right_vectors.column(j));
    }

    // Rescale left vectors group by group so that Phi^H Psi = I.
    let groups = degenerate_groups(&right.eigenvalues, DEGENERACY_TOLERANCE);
    for group in &groups {
        let m = group.len();
        let mut gram = ComplexMatrix::zeros(m, m);
        for (a, &ia) in group.iter().enumerate() {
            for (b, &ib) in group.iter().enumerate() {
                let phi = left_matrix.column(ia);
                let psi = right.right_vectors.column(ib);
                gram[(a, b)] = phi.inner(&psi).expect("same dimension");
            }
        }
        let inv = gram
            .adjoint()
            .inverse()
            .map_err(|_| Error::DefectiveMatrix("singular Gram block".into()))?;
        // Phi_g <- Phi_g * (G^H)^{-1}.
        let old: Vec<_> = group.iter().map(|&i| left_matrix.column(i)).collect();
        for (b, &ib) in group.iter().enumerate() {
            let mut col = old[0].scale(inv[(0, b)]);
            for (a, phi) in old.iter().enumerate().skip(1) {
                col = col
                    .sub(&phi.scale(-inv[(a, b)]))
                    .expect("same dimension");
            }
            left_matrix.set_column(ib, &col);
        }
    }

    let identity = ComplexMatrix::identity(n);
    let biorth = left_matrix
        .adjoint()
        .multiply(&right.right_vectors)
        .expect("square")
        .sub(&identity)
        .expect("square")
        .frobenius_norm();
    let completeness = right
        .right_vectors
        .multiply(&left_matrix.adjoint())
        .expect("square")
        .sub(&identity)
        .expect("square")
        .frobenius_norm();
    if !(biorth <= tol && completeness <= tol) {
        return Err(Error::DefectiveMatrix(format!(
            "biorthogonality residual {biorth:.3e}, completeness residual {completeness:.3e} exceed tolerance {tol:.3e}"
        )));
    }

    Ok(BiorthonormalSystem {
        eigenvalues: right.eigenvalues,
        right_matrix: right.right_vectors,
        left_matrix,
        biorthogonality_residual: biorth,
        completeness_residual: completeness,
    })
}

/// Recomputes all residuals of `system` against `h`; read-only.
pub fn verify(system: &BiorthonormalSystem, h: &ComplexMatrix) -> Result<SystemResiduals, Error> {
    let n = system.dim();
    if !h.is_square() || h.rows() != n {
        return Err(Error::DimensionMismatch {
            left: (h.rows(), h.cols()),
            right: (n, n),
        });
    }
    let conj_values: Vec<Complex64> = system.eigenvalues.iter().map(|l| l.conj()).collect();
    let identity = ComplexMatrix::identity(n);
    let biorth = system
        .left_matrix
        .adjoint()
        .multiply(&system.right_matrix)?
        .sub(&identity)?
        .frobenius_norm();
    let completeness = system
        .right_matrix
        .multiply(&system.left_matrix.adjoint())?
        .sub(&identity)?
        .frobenius_norm();
    Ok(SystemResiduals {
        eig_residual_right: eigenpair_residual(h, &system.eigenvalues, &system.right_matrix),
        eig_residual_left: eigenpair_residual(&h.adjoint(), &conj_values, &system.left_matrix),
        biorth_residual: biorth,
        completeness_residual: completeness,
    })
}

/// Partitions eigenvalue indices into clusters closed under the relation
/// `|lambda_i - lambda_j| <= tol * (1 + max |lambda|)`.
///
/// Groups are returned ordered by smallest member, members ascending.
pub fn degenerate_groups(eigenvalues: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = eigenvalues.len();
    let max_abs = eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let thresh = tol * (1.0 + max_abs);

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = i;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (eigenvalues[i] - eigenvalues[j]).norm() <= thresh {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj.max(ri)] = rj.min(ri);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_to_group: std::collections::BTreeMap<usize, usize> =
        std::collections::BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let idx = *root_to_group.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[idx].push(i);
    }
    groups
}
