//! General (non-Hermitian) dense eigendecomposition.
//!
//! The reduction chain is the standard one: unitary Householder reduction to
//! upper Hessenberg form, shifted QR iteration with deflation to reach a
//! triangular Schur form, then back-substitution on the triangular factor for
//! right eigenvectors. The contract is residual-based: the returned
//! decomposition stores `max_k ||H v_k - lambda_k v_k||_2 / ||H||_F` over all
//! eigenpairs and fails with `ConvergenceFailure` if that value does not meet
//! the requested tolerance.

use num_complex::Complex64;

use crate::error::Error;
use crate::matrix::ComplexMatrix;

/// Sweep cap for the QR iteration, per matrix dimension.
const MAX_SWEEPS_PER_DIM: usize = 100;

/// Eigenvalues and unit-norm right eigenvectors of a square complex matrix.
///
/// Eigenvalues are sorted by `(re, im)` lexicographic ascending with ties
/// broken by discovery order; column `k` of `right_vectors` belongs to
/// `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    pub right_vectors: ComplexMatrix,
    pub residual: f64,
}

/// Computes all eigenvalues and right eigenvectors of `h`.
///
/// `tol` bounds the stored relative residual; values around `1e-8` are
/// comfortable for dimensions up to a few hundred in double precision.
pub fn general_eigendecomposition(
    h: &ComplexMatrix,
    tol: f64,
) -> Result<EigenDecomposition, Error> {
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

    let (mut t, mut q) = hessenberg(h);
    schur_triangularize(&mut t, &mut q, MAX_SWEEPS_PER_DIM * n, h_norm)?;

    let x = triangular_right_vectors(&t);
    let mut vectors = q.multiply(&x).expect("square shapes agree");
    let mut eigenvalues: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();

    // Unit-norm columns.
    for k in 0..n {
        let col = vectors.column(k).normalized();
        vectors.set_column(k, &col);
    }

    // Sort eigenpairs lexicographically by (re, im), stable in discovery order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (eigenvalues[a], eigenvalues[b]);
        la.re
            .partial_cmp(&lb.re)
            .unwrap()
            .then(la.im.partial_cmp(&lb.im).unwrap())
            .then(a.cmp(&b))
    });
    let sorted_values: Vec<Complex64> = order.iter().map(|&i| eigenvalues[i]).collect();
    let mut sorted_vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.set_column(dst, &vectors.column(src));
    }
    eigenvalues = sorted_values;
    vectors = sorted_vectors;

    let residual = eigenpair_residual(h, &eigenvalues, &vectors);
    if residual > tol || !residual.is_finite() {
        return Err(Error::ConvergenceFailure(format!(
            "eigenpair residual {residual:.3e} exceeds tolerance {tol:.3e}"
        )));
    }

    Ok(EigenDecomposition {
        eigenvalues,
        right_vectors: vectors,
        residual,
    })
}

/// `max_k ||H v_k - lambda_k v_k||_2 / (||H||_F ||v_k||_2)`; zero for a zero
/// matrix.
pub fn eigenpair_residual(
    h: &ComplexMatrix,
    eigenvalues: &[Complex64],
    vectors: &ComplexMatrix,
) -> f64 {
    let h_norm = h.frobenius_norm();
    if h_norm == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        let v = vectors.column(k);
        let hv = h.mul_vec(&v).expect("dimensions agree");
        let r = hv.sub(&v.scale(lambda)).expect("dimensions agree").norm();
        let vnorm = v.norm();
        if vnorm == 0.0 {
            return f64::INFINITY;
        }
        worst = worst.max(r / (h_norm * vnorm));
    }
    worst
}

/// Unitary reduction to upper Hessenberg form: returns `(T, Q)` with
/// `Q^H A Q = T`, `Q` unitary, `T` zero below the first subdiagonal.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut t = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n <= 2 {
        return (t, q);
    }

    for k in 0..n - 2 {
        // Householder reflector annihilating t[k+2.., k].
        let m = n - k - 1; // length of the subcolumn starting at row k+1
        let mut v = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            v[i] = t[(k + 1 + i, k)];
        }
        let tail_norm_sq: f64 = v[1..].iter().map(|c| c.norm_sqr()).sum();
        let alpha = v[0];
        if tail_norm_sq == 0.0 {
            continue; // column already reduced
        }
        let mu = (alpha.norm_sqr() + tail_norm_sq).sqrt();
        let phase = if alpha.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            alpha / alpha.norm()
        };
        v[0] = alpha + phase * mu;
        let v_norm_sq: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        let beta = 2.0 / v_norm_sq;

        // Left: rows k+1..n, columns k..n.
        for j in k..n {
            let mut w = Complex64::new(0.0, 0.0);
            for i in 0..m {
                w += v[i].conj() * t[(k + 1 + i, j)];
            }
            w *= beta;
            for i in 0..m {
                let delta = w * v[i];
                t[(k + 1 + i, j)] -= delta;
            }
        }
        // Right: columns k+1..n, all rows.
        for i in 0..n {
            let mut w = Complex64::new(0.0, 0.0);
            for j in 0..m {
                w += t[(i, k + 1 + j)] * v[j];
            }
            w *= beta;
            for j in 0..m {
                let delta = w * v[j].conj();
                t[(i, k + 1 + j)] -= delta;
            }
        }
        // Accumulate Q <- Q * P.
        for i in 0..n {
            let mut w = Complex64::new(0.0, 0.0);
            for j in 0..m {
                w += q[(i, k + 1 + j)] * v[j];
            }
            w *= beta;
            for j in 0..m {
                let delta = w * v[j].conj();
                q[(i, k + 1 + j)] -= delta;
            }
        }
        // Entries below the subdiagonal are now zero by construction.
        for i in (k + 2)..n {
            t[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    (t, q)
}

/// Complex Givens rotation `[[c, s], [-conj(s), c]]` (c real) sending
/// `(f, g)` to `(r, 0)`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    if g.norm() == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if f.norm() == 0.0 {
        return (0.0, g.conj() / g.norm());
    }
    let fa = f.norm();
    let d = (f.norm_sqr() + g.norm_sqr()).sqrt();
    let c = fa / d;
    let s = (f / fa) * g.conj() / d;
    (c, s)
}

/// Shifted QR iteration with deflation, driving the Hessenberg matrix `t` to
/// upper triangular form while accumulating the unitary similarity into `q`.
fn schur_triangularize(
    t: &mut ComplexMatrix,
    q: &mut ComplexMatrix,
    sweep_cap: usize,
    h_norm: f64,
) -> Result<(), Error> {
    let n = t.rows();
    if n <= 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let negligible = |t: &ComplexMatrix, i: usize| -> bool {
        let scale = t[(i - 1, i - 1)].norm() + t[(i, i)].norm();
        let scale = if scale == 0.0 { h_norm.max(1.0) } else { scale };
        t[(i, i - 1)].norm() <= eps * scale
    };

    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut local_iter = 0usize;

    'outer: while hi > 0 {
        // Deflate converged trailing eigenvalues.
        if negligible(t, hi) {
            t[(hi, hi - 1)] = Complex64::new(0.0, 0.0);
            hi -= 1;
            local_iter = 0;
            continue 'outer;
        }
        // Locate the start of the unreduced block ending at hi.
        let mut lo = hi;
        while lo > 0 && !negligible(t, lo) {
            lo -= 1;
        }
        if lo > 0 {
            t[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
        }

        sweeps += 1;
        local_iter += 1;
        if sweeps > sweep_cap {
            return Err(Error::ConvergenceFailure(format!(
                "QR iteration exceeded {sweep_cap} sweeps"
            )));
        }

        let shift = if local_iter % 15 == 0 {
            // Exceptional shift to break symmetric stagnation.
            t[(hi, hi)] + Complex64::new(0.75 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(t, hi)
        };

        qr_sweep(t, q, lo, hi, shift);
    }
    // Make the triangular form exact below the diagonal.
    for i in 1..n {
        for j in 0..i {
            t[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(())
}

/// Eigenvalue of the trailing 2x2 block closest to the corner entry.
fn wilkinson_shift(t: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = t[(hi - 1, hi - 1)];
    let b = t[(hi - 1, hi)];
    let c = t[(hi, hi - 1)];
    let d = t[(hi, hi)];
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let root = disc.sqrt();
    let mu1 = half_tr + root;
    let mu2 = half_tr - root;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// One explicit shifted QR step on the active block `[lo..=hi]`.
fn qr_sweep(t: &mut ComplexMatrix, q: &mut ComplexMatrix, lo: usize, hi: usize, shift: Complex64) {
    let n = t.rows();
    for i in lo..=hi {
        t[(i, i)] -= shift;
    }
    // Left phase: zero the subdiagonal with Givens rotations.
    let mut rotations = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let (c, s) = givens(t[(i, i)], t[(i + 1, i)]);
        for j in i..n {
            let x = t[(i, j)];
            let y = t[(i + 1, j)];
            t[(i, j)] = c * x + s * y;
            t[(i + 1, j)] = -s.conj() * x + c * y;
        }
        t[(i + 1, i)] = Complex64::new(0.0, 0.0);
        rotations.push((c, s));
    }
    // Right phase: multiply by the adjoints, restoring Hessenberg form.
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let i = lo + idx;
        let row_end = (i + 1).min(hi);
        for r in 0..=row_end {
            let x = t[(r, i)];
            let y = t[(r, i + 1)];
            t[(r, i)] = c * x + s.conj() * y;
            t[(r, i + 1)] = -s * x + c * y;
        }
        for r in 0..n {
            let x = q[(r, i)];
            let y = q[(r, i + 1)];
            q[(r, i)] = c * x + s.conj() * y;
            q[(r, i + 1)] = -s * x + c * y;
        }
    }
    for i in lo..=hi {
        t[(i, i)] += shift;
    }
}

/// Right eigenvectors of an upper triangular matrix by back-substitution.
///
/// Column `k` solves `(T - t_kk I) x = 0` with `x_k = 1`; vanishing
/// denominators are floored at `eps * ||T||_F` so the routine also yields
/// usable (possibly parallel) vectors for defective inputs. Growth is kept
/// in range by rescaling the partial column when an entry gets large.
fn triangular_right_vectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let t_norm = t.frobenius_norm();
    let floor = if t_norm == 0.0 {
        f64::EPSILON
    } else {
        f64::EPSILON * t_norm
    };
    let big = 1e200;

    let mut x = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        x[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                s += t[(i, j)] * x[(j, k)];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < floor {
                d = if d.norm() == 0.0 {
                    Complex64::new(floor, 0.0)
                } else {
                    d * (floor / d.norm())
                };
            }
            let mut val = -s / d;
            if val.norm() > big {
                let rescale = Complex64::new(1.0 / val.norm(), 0.0);
                for j in (i + 1)..=k {
                    let scaled = x[(j, k)] * rescale;
                    x[(j, k)] = scaled;
                }
                val *= rescale;
            }
            x[(i, k)] = val;
        }
    }
    x
}
