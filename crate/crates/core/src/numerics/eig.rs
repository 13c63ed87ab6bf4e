//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Eigenvalues are returned ascending. Equal eigenvalues keep the order in
//! which their pivots settled, so degenerate spectra resolve by lowest index.

use super::cmatrix::{CMatrix, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column i pairs with `eigenvalues[i]`.
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    /// V·diag(λ)·V^H.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        CMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj()).sum()
        })
    }
}

fn validate_square(a: &CMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("expected square matrix, got {}x{}", a.rows(), a.cols())));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("matrix entry".into()));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized first.
pub fn eig_hermitian(a: &CMatrix) -> Result<HermitianEig> {
    validate_square(a)?;
    if a.hermitian_defect() > HERMITIAN_TOL && a.frobenius_norm() > 0.0 {
        return Err(Error::InvalidInput(format!(
            "matrix is not Hermitian (relative defect {:.3e})",
            a.hermitian_defect()
        )));
    }
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm();
    if n > 1 && scale > 0.0 {
        let stop = 1e-15 * scale;
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= stop {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEig { eigenvalues, eigenvectors })
}

/// Annihilates m[p][q] with U = D·G, D = diag(1, e^{-iφ}) on (p, q).
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag <= f64::MIN_POSITIVE {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    if mag < 1e-300 || mag <= 1e-18 * (app.abs() + aqq.abs()) {
        m[(p, q)] = C64::new(0.0, 0.0);
        m[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ph = phase.conj();
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = ph * (-s);
    let u_qq = ph * c;
    let n = m.rows();
    // A ← A·U
    for i in 0..n {
        let aip = m[(i, p)];
        let aiq = m[(i, q)];
        m[(i, p)] = aip * u_pp + aiq * u_qp;
        m[(i, q)] = aip * u_pq + aiq * u_qq;
    }
    // A ← U^H·A
    for j in 0..n {
        let apj = m[(p, j)];
        let aqj = m[(q, j)];
        m[(p, j)] = u_pp.conj() * apj + u_qp.conj() * aqj;
        m[(q, j)] = u_pq.conj() * apj + u_qq.conj() * aqj;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * u_pp + viq * u_qp;
        v[(i, q)] = vip * u_pq + viq * u_qq;
    }
}

/// Frobenius-nearest PSD matrix: negative eigenvalues clipped to zero.
pub fn psd_project(a: &CMatrix) -> Result<CMatrix> {
    let mut e = eig_hermitian(a)?;
    if e.eigenvalues.iter().all(|&l| l >= 0.0) {
        return Ok(a.hermitian_part());
    }
    for l in &mut e.eigenvalues {
        *l = l.max(0.0);
    }
    Ok(e.reconstruct().hermitian_part())
}

#[derive(Debug, Clone)]
pub struct DominantEig {
    pub value: f64,
    /// Unit norm; the first largest-magnitude entry is real and positive.
    pub vector: Vec<C64>,
    /// Set for the zero matrix, whose returned vector is e_0.
    pub degenerate: bool,
}

/// Largest eigenpair of a Hermitian PSD matrix.
///
/// Ties within 1e-12 relative pick the eigenvector whose pivot index is lowest.
pub fn dominant_eigvec(a: &CMatrix) -> Result<DominantEig> {
    validate_square(a)?;
    let n = a.rows();
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        let mut vector = vec![C64::new(0.0, 0.0); n];
        vector[0] = C64::new(1.0, 0.0);
        return Ok(DominantEig { value: 0.0, vector, degenerate: true });
    }
    let e = eig_hermitian(a)?;
    let top = e.eigenvalues[n - 1];
    let tie = 1e-12 * scale;
    let k = (0..n).find(|&k| e.eigenvalues[k] >= top - tie).unwrap_or(n - 1);
    let mut vector = e.eigenvectors.col(k);
    let pivot = vector
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |best, (i, z)| if z.norm() > best.1 + 1e-12 { (i, z.norm()) } else { best })
        .0;
    let ph = vector[pivot] / vector[pivot].norm();
    let norm = super::cmatrix::vnorm(&vector);
    for z in &mut vector {
        *z = *z * ph.conj() / norm;
    }
    Ok(DominantEig { value: top.max(0.0), vector, degenerate: top <= tie })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{outer, vdot, vnorm, Rng};
    use proptest::prelude::*;

    fn random_hermitian(n: usize, rng: &mut Rng) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| rng.complex_normal());
        g.add(&g.adjoint()).scale_real(0.5)
    }

    fn gram_defect(v: &CMatrix) -> f64 {
        v.adjoint().matmul(v).max_abs_diff(&CMatrix::identity(v.cols()))
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = eig_hermitian(&CMatrix::identity(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_input_returns_sorted_basis() {
        let e = eig_hermitian(&CMatrix::diag_real(&[2.0, -1.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 2.0]);
        assert_eq!(e.eigenvectors.col(0), vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(e.eigenvectors.col(1), vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = Rng::new(11);
        let a = random_hermitian(5, &mut rng);
        let e = eig_hermitian(&a).unwrap();
        // independent oracle: A·v_i = λ_i·v_i column by column
        for k in 0..5 {
            let v = e.eigenvectors.col(k);
            let av = a.mat_vec(&v);
            let err: f64 = av.iter().zip(&v).map(|(x, y)| (x - y * e.eigenvalues[k]).norm_sqr()).sum::<f64>().sqrt();
            assert!(err <= 1e-8 * a.frobenius_norm(), "eigpair {k} residual {err}");
        }
        assert!(e.reconstruct().sub(&a).frobenius_norm() <= 1e-8 * a.frobenius_norm());
        assert!(gram_defect(&e.eigenvectors) < 1e-8);
    }

    #[test]
    fn rejects_non_square_and_nan() {
        assert!(matches!(eig_hermitian(&CMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
        let mut m = CMatrix::identity(2);
        m.data_mut()[1] = C64::new(f64::NAN, 0.0);
        assert!(eig_hermitian(&m).is_err());
    }

    #[test]
    fn psd_input_is_fixed_point() {
        let mut rng = Rng::new(3);
        let g = CMatrix::from_fn(4, 4, |_, _| rng.complex_normal());
        let a = g.matmul(&g.adjoint());
        assert!(psd_project(&a).unwrap().max_abs_diff(&a) < 1e-10);
    }

    #[test]
    fn psd_project_clips_negative_eigenvalue() {
        let p = psd_project(&CMatrix::diag_real(&[-1.0, 2.0])).unwrap();
        assert!(p.max_abs_diff(&CMatrix::diag_real(&[0.0, 2.0])) < 1e-15);
    }

    #[test]
    fn psd_project_beats_sampled_psd_neighbours() {
        let mut rng = Rng::new(17);
        let a = random_hermitian(4, &mut rng);
        let p = psd_project(&a).unwrap();
        let best = p.sub(&a).frobenius_norm();
        assert!(eig_hermitian(&p).unwrap().eigenvalues[0] >= -1e-10);
        for _ in 0..1000 {
            let g = CMatrix::from_fn(4, 4, |_, _| rng.complex_normal() * 0.3);
            let cand = psd_project(&p.add(&g.add(&g.adjoint()))).unwrap();
            assert!(cand.sub(&a).frobenius_norm() >= best - 1e-10);
        }
    }

    #[test]
    fn dominant_of_rank_one() {
        let h = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
        let d = dominant_eigvec(&outer(&h)).unwrap();
        assert!((d.value - 2.0).abs() < 1e-12);
        assert!((vdot(&d.vector, &h).norm() - vnorm(&h)).abs() < 1e-12);
        assert!(!d.degenerate);
    }

    #[test]
    fn dominant_tie_breaks_to_lowest_index() {
        let d = dominant_eigvec(&CMatrix::identity(2)).unwrap();
        assert_eq!(d.value, 1.0);
        assert_eq!(d.vector, vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    }

    #[test]
    fn dominant_of_zero_is_flagged() {
        let d = dominant_eigvec(&CMatrix::zeros(3, 3)).unwrap();
        assert!(d.degenerate);
        assert_eq!(d.value, 0.0);
        assert!((vnorm(&d.vector) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dominant_matches_full_decomposition() {
        let mut rng = Rng::new(5);
        let g = CMatrix::from_fn(6, 6, |_, _| rng.complex_normal());
        let a = g.matmul(&g.adjoint());
        let full = eig_hermitian(&a).unwrap();
        let d = dominant_eigvec(&a).unwrap();
        assert!((d.value - full.eigenvalues[5]).abs() <= 1e-10 * d.value);
        let overlap = vdot(&d.vector, &full.eigenvectors.col(5)).norm();
        assert!((overlap - 1.0).abs() < 1e-8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn reconstruction_and_projection_bounds(n in 1usize..=32, seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let a = random_hermitian(n, &mut rng);
            let e = eig_hermitian(&a).unwrap();
            let fro = a.frobenius_norm();
            prop_assert!(e.reconstruct().sub(&a).frobenius_norm() <= 1e-8 * fro);
            prop_assert!(gram_defect(&e.eigenvectors) <= 1e-8);
            prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let p = psd_project(&a).unwrap();
            prop_assert!(eig_hermitian(&p).unwrap().eigenvalues[0] >= -1e-10 * fro.max(1.0));
        }
    }
}
