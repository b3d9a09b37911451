use nalgebra::{DMatrix, DVector, Matrix2};

use super::state::{check_modes, GaussianState};
use crate::error::{invalid, Error, Result};

/// Affine phase-space map `r ↦ S·r + shift` with `S` symplectic.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
    shift: DVector<f64>,
}

/// Parametrised optical elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// Two-mode beam splitter,
    /// `(x₁, x₂) ↦ (√μ·x₁ + √(1−μ)·x₂, −√(1−μ)·x₁ + √μ·x₂)` on both quadratures.
    /// `μ = 1` is the identity, `μ = 0` swaps the modes with a sign flip on
    /// the second output.
    BeamSplitter { mu: f64 },
    /// Two-mode squeezer (parametric amplifier) with gain `r` and pump phase `phi`.
    TwoModeSqueezer { r: f64, phi: f64 },
    /// Rotation of one mode by `phi`.
    PhaseShift { phi: f64 },
    /// Single-mode squeezer: variances `e^{2w}` and `e^{−2w}` along the axes
    /// rotated by `alpha / 2`.
    Squeezer { w: f64, alpha: f64 },
    /// Displacement by `(d cos β, d sin β)`.
    Displacement { d: f64, beta: f64 },
}

fn rotation(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

fn put(m: &mut DMatrix<f64>, row: usize, col: usize, block: &Matrix2<f64>) {
    m.view_mut((2 * row, 2 * col), (2, 2)).copy_from(block);
}

/// Standard block-diagonal symplectic form on `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

impl Element {
    pub fn modes(&self) -> usize {
        match self {
            Element::BeamSplitter { .. } | Element::TwoModeSqueezer { .. } => 2,
            _ => 1,
        }
    }

    /// The element as a symplectic transform on its own modes.
    pub fn transform(&self) -> Result<SymplecticTransform> {
        match *self {
            Element::BeamSplitter { mu } => {
                if !(0.0..=1.0).contains(&mu) {
                    return Err(invalid("mu", mu, "beam-splitter parameter must lie in [0, 1]"));
                }
                let (t, r) = (mu.sqrt(), (1.0 - mu).sqrt());
                let mut m = DMatrix::zeros(4, 4);
                put(&mut m, 0, 0, &Matrix2::from_diagonal_element(t));
                put(&mut m, 0, 1, &Matrix2::from_diagonal_element(r));
                put(&mut m, 1, 0, &Matrix2::from_diagonal_element(-r));
                put(&mut m, 1, 1, &Matrix2::from_diagonal_element(t));
                Ok(SymplecticTransform::linear(m))
            }
            Element::TwoModeSqueezer { r, phi } => {
                if !(r >= 0.0 && r.is_finite()) {
                    return Err(invalid("r", r, "squeezing gain must be finite and non-negative"));
                }
                let (s, c) = phi.sin_cos();
                let z = Matrix2::new(c, s, s, -c) * r.sinh();
                let diag = Matrix2::from_diagonal_element(r.cosh());
                let mut m = DMatrix::zeros(4, 4);
                put(&mut m, 0, 0, &diag);
                put(&mut m, 0, 1, &z);
                put(&mut m, 1, 0, &z);
                put(&mut m, 1, 1, &diag);
                Ok(SymplecticTransform::linear(m))
            }
            Element::PhaseShift { phi } => {
                let mut m = DMatrix::zeros(2, 2);
                put(&mut m, 0, 0, &rotation(phi));
                Ok(SymplecticTransform::linear(m))
            }
            Element::Squeezer { w, alpha } => {
                if !w.is_finite() {
                    return Err(invalid("w", w, "must be finite"));
                }
                let half = rotation(alpha / 2.0);
                let core = Matrix2::new(w.exp(), 0.0, 0.0, (-w).exp());
                let mut m = DMatrix::zeros(2, 2);
                put(&mut m, 0, 0, &(half * core * half.transpose()));
                Ok(SymplecticTransform::linear(m))
            }
            Element::Displacement { d, beta } => {
                let (s, c) = beta.sin_cos();
                Ok(SymplecticTransform {
                    matrix: DMatrix::identity(2, 2),
                    shift: DVector::from_vec(vec![d * c, d * s]),
                })
            }
        }
    }
}

impl SymplecticTransform {
    fn linear(matrix: DMatrix<f64>) -> Self {
        let n = matrix.nrows();
        Self {
            matrix,
            shift: DVector::zeros(n),
        }
    }

    /// Validates the symplectic condition `S·Ω·Sᵀ = Ω` to `1e-10`.
    pub fn new(matrix: DMatrix<f64>, shift: DVector<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || !n.is_multiple_of(2) || matrix.ncols() != n || shift.len() != n {
            return Err(Error::Dimension(format!(
                "transform must be 2M x 2M with a 2M shift, got {}x{} and {}",
                n,
                matrix.ncols(),
                shift.len()
            )));
        }
        let t = Self { matrix, shift };
        let err = t.symplectic_error();
        if err > 1e-10 {
            return Err(Error::Dimension(format!(
                "matrix is not symplectic (max deviation {err:e})"
            )));
        }
        Ok(t)
    }

    pub fn identity(modes: usize) -> Self {
        Self::linear(DMatrix::identity(2 * modes, 2 * modes))
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.shift
    }

    /// Largest entry of `|S·Ω·Sᵀ − Ω|`.
    pub fn symplectic_error(&self) -> f64 {
        let omega = symplectic_form(self.modes());
        (&self.matrix * &omega * self.matrix.transpose() - omega).amax()
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &SymplecticTransform) -> Result<SymplecticTransform> {
        if self.modes() != first.modes() {
            return Err(Error::Dimension(format!(
                "cannot compose {}-mode and {}-mode transforms",
                self.modes(),
                first.modes()
            )));
        }
        Ok(SymplecticTransform {
            matrix: &self.matrix * &first.matrix,
            shift: &self.matrix * &first.shift + &self.shift,
        })
    }

    /// Embeds this transform on `modes` of a `total`-mode system.
    pub fn embed(&self, modes: &[usize], total: usize) -> Result<SymplecticTransform> {
        if modes.len() != self.modes() {
            return Err(Error::Dimension(format!(
                "{}-mode transform applied to {} modes",
                self.modes(),
                modes.len()
            )));
        }
        check_modes(modes, total)?;
        let mut full = SymplecticTransform::identity(total);
        for (a, &ma) in modes.iter().enumerate() {
            full.shift[2 * ma] = self.shift[2 * a];
            full.shift[2 * ma + 1] = self.shift[2 * a + 1];
            for (b, &mb) in modes.iter().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        full.matrix[(2 * ma + i, 2 * mb + j)] = self.matrix[(2 * a + i, 2 * b + j)];
                    }
                }
            }
        }
        Ok(full)
    }
}

/// Propagates `state` through `t` acting on `modes`:
/// `mean' = S·mean + shift`, `cov' = S·cov·Sᵀ`.
pub fn apply(t: &SymplecticTransform, state: &GaussianState, modes: &[usize]) -> Result<GaussianState> {
    let full = t.embed(modes, state.modes())?;
    let mean = &full.matrix * state.mean() + &full.shift;
    let cov = &full.matrix * state.cov() * full.matrix.transpose();
    // Re-symmetrise against round-off.
    let cov = (&cov + cov.transpose()) * 0.5;
    Ok(GaussianState::from_parts(mean, cov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{mean_photon, vacuum, displaced_thermal, Source};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn el(e: Element) -> SymplecticTransform {
        e.transform().unwrap()
    }

    #[test]
    fn beam_splitter_limits() {
        assert_eq!(el(Element::BeamSplitter { mu: 1.0 }), SymplecticTransform::identity(2));
        let swap = el(Element::BeamSplitter { mu: 0.0 });
        let s = GaussianState::new(DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]), DMatrix::identity(4, 4)).unwrap();
        let out = apply(&swap, &s, &[0, 1]).unwrap();
        assert_eq!(out.mean().as_slice(), &[3.0, 4.0, -1.0, -2.0]);
        assert!(Element::BeamSplitter { mu: 1.5 }.transform().is_err());
    }

    #[test]
    fn two_mode_squeezer_at_zero_gain_is_identity() {
        for phi in [0.0, 1.0, 4.0] {
            let t = el(Element::TwoModeSqueezer { r: 0.0, phi });
            assert_abs_diff_eq!(t.matrix(), &DMatrix::identity(4, 4), epsilon = 0.0);
        }
        assert!(Element::TwoModeSqueezer { r: -0.1, phi: 0.0 }.transform().is_err());
    }

    #[test]
    fn single_mode_actions() {
        let vac = vacuum(1).unwrap();
        let rotated = apply(&el(Element::PhaseShift { phi: 0.8 }), &vac, &[0]).unwrap();
        assert_abs_diff_eq!(rotated.cov(), vac.cov(), epsilon = 1e-15);

        let q: f64 = 1.7;
        let sq = apply(&el(Element::Squeezer { w: q.ln(), alpha: 0.0 }), &vac, &[0]).unwrap();
        assert_abs_diff_eq!(sq.cov()[(0, 0)], q * q, epsilon = 1e-12);
        assert_abs_diff_eq!(sq.cov()[(1, 1)], 1.0 / (q * q), epsilon = 1e-12);
        assert_abs_diff_eq!(sq.cov()[(0, 1)], 0.0, epsilon = 1e-12);

        let st = displaced_thermal(&Source::new(2.0, 1.0).unwrap(), 0.3);
        let moved = apply(&el(Element::Displacement { d: 2.0, beta: 0.5 }), &st, &[0]).unwrap();
        assert_abs_diff_eq!(moved.mean()[0] - st.mean()[0], 2.0 * 0.5f64.cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(moved.mean()[1] - st.mean()[1], 2.0 * 0.5f64.sin(), epsilon = 1e-12);
        assert_eq!(moved.cov(), st.cov());
    }

    #[test]
    fn arity_and_index_errors() {
        let vac = vacuum(2).unwrap();
        let bs = el(Element::BeamSplitter { mu: 0.5 });
        assert!(apply(&bs, &vac, &[0]).is_err());
        assert!(apply(&bs, &vac, &[0, 0]).is_err());
        assert!(apply(&bs, &vac, &[0, 2]).is_err());
    }

    #[test]
    fn rejects_non_symplectic() {
        let m = DMatrix::from_diagonal_element(2, 2, 2.0);
        assert!(SymplecticTransform::new(m, DVector::zeros(2)).is_err());
    }

    fn element() -> impl Strategy<Value = Element> {
        prop_oneof![
            (0.0..=1.0f64).prop_map(|mu| Element::BeamSplitter { mu }),
            (0.0..2.0f64, 0.0..6.3f64).prop_map(|(r, phi)| Element::TwoModeSqueezer { r, phi }),
            (0.0..6.3f64).prop_map(|phi| Element::PhaseShift { phi }),
            (-1.5..1.5f64, 0.0..6.3f64).prop_map(|(w, alpha)| Element::Squeezer { w, alpha }),
            (0.0..5.0f64, 0.0..6.3f64).prop_map(|(d, beta)| Element::Displacement { d, beta }),
        ]
    }

    fn on_modes(e: &Element) -> Vec<usize> {
        if e.modes() == 2 { vec![0, 1] } else { vec![1] }
    }

    fn random_state(r: f64, d: f64, theta: f64) -> GaussianState {
        displaced_thermal(&Source::new(r, d).unwrap(), theta).product(&vacuum(1).unwrap())
    }

    proptest! {
        #[test]
        fn constructors_are_symplectic(e in element()) {
            prop_assert!(e.transform().unwrap().symplectic_error() < 1e-10);
        }

        #[test]
        fn apply_preserves_psd(e in element(), r in 1.0..5.0f64, d in 0.0..5.0f64, th in 0.0..6.3f64) {
            let s = random_state(r, d, th);
            let out = apply(&e.transform().unwrap(), &s, &on_modes(&e)).unwrap();
            prop_assert!(out.min_eigenvalue() >= -1e-10);
        }

        #[test]
        fn composition_law(e1 in element(), e2 in element(), r in 1.0..5.0f64, th in 0.0..6.3f64) {
            let s = random_state(r, 1.0, th);
            let t1 = e1.transform().unwrap().embed(&on_modes(&e1), 2).unwrap();
            let t2 = e2.transform().unwrap().embed(&on_modes(&e2), 2).unwrap();
            let seq = apply(&t2, &apply(&t1, &s, &[0, 1]).unwrap(), &[0, 1]).unwrap();
            let once = apply(&t2.after(&t1).unwrap(), &s, &[0, 1]).unwrap();
            let scale = 1.0f64.max(seq.cov().amax());
            prop_assert!((seq.cov() - once.cov()).amax() <= 1e-10 * scale);
            prop_assert!((seq.mean() - once.mean()).amax() <= 1e-10 * scale);
        }

        #[test]
        fn photon_number_is_rotation_invariant(phi in 0.0..6.3f64, w in -1.0..1.0f64, a in 0.0..6.3f64, d in 0.0..3.0f64) {
            let s = displaced_thermal(&Source::new(1.5, d).unwrap(), 0.7);
            let s = apply(&Element::Squeezer { w, alpha: a }.transform().unwrap(), &s, &[0]).unwrap();
            let rotated = apply(&Element::PhaseShift { phi }.transform().unwrap(), &s, &[0]).unwrap();
            let (n0, n1) = (mean_photon(&s, 0).unwrap(), mean_photon(&rotated, 0).unwrap());
            prop_assert!((n0 - n1).abs() <= 1e-12 * n0.abs().max(1.0));
        }
    }
}
