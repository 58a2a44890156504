//! Constant-metric machinery: musical isomorphisms, Hodge star, inner
//! products on forms and multivectors, and metric recovery from a 3-form.
//!
//! All operators stay exact over ℚ. The star needs the volume normalization
//! `sqrt(det g)`, so it is only available when that square root is rational;
//! the Euclidean metric and diagonal test metrics with square determinant
//! all qualify.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::CalcError;
use crate::exterior::{contract, coordinate_vector, eq_or_both_zero, Form, MultiIndex, MultiVector};
use crate::linalg::QMatrix;
use crate::polyring::Polynomial;
use crate::util::parity_rat;
use crate::Rational;

/// Constant symmetric nondegenerate metric on ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    dim: usize,
    g: QMatrix,
    ginv: QMatrix,
    det: Rational,
    sqrt_det: Option<Rational>,
    riemannian: bool,
    diagonal: bool,
}

impl Metric {
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self, CalcError> {
        let dim = entries.len();
        if entries.iter().any(|r| r.len() != dim) {
            return Err(CalcError::AsymmetricMetric);
        }
        let g = QMatrix::from_rows(entries);
        for i in 0..dim {
            for j in 0..i {
                if g.at(i, j) != g.at(j, i) {
                    return Err(CalcError::AsymmetricMetric);
                }
            }
        }
        let det = g.det();
        if det.is_zero() {
            return Err(CalcError::SingularMetric);
        }
        let ginv = g.inverse().expect("nonzero determinant");
        let riemannian = g.is_positive_definite();
        let diagonal = (0..dim).all(|i| (0..dim).all(|j| i == j || g.at(i, j).is_zero()));
        let sqrt_det = rational_sqrt(&det);
        Ok(Metric {
            dim,
            g,
            ginv,
            det,
            sqrt_det,
            riemannian,
            diagonal,
        })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::diag(vec![Rational::from_integer(1.into()); dim]).expect("identity is a metric")
    }

    pub fn diag(entries: Vec<Rational>) -> Result<Self, CalcError> {
        let dim = entries.len();
        let mut rows = vec![vec![Rational::zero(); dim]; dim];
        for (i, e) in entries.into_iter().enumerate() {
            rows[i][i] = e;
        }
        Self::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.g
    }

    pub fn inverse_matrix(&self) -> &QMatrix {
        &self.ginv
    }

    pub fn det(&self) -> &Rational {
        &self.det
    }

    pub fn is_riemannian(&self) -> bool {
        self.riemannian
    }

    /// The volume form `sqrt(det g) dx1...n`.
    pub fn vol(&self) -> Result<Form, CalcError> {
        let s = self.sqrt_det.clone().ok_or(CalcError::IrrationalVolume)?;
        let all: Vec<u8> = (1..=self.dim as u8).collect();
        Ok(Form::basis(self.dim, &all)?.scale(&s))
    }

    /// Index lowering. On a decomposable basis q-vector this is the wedge of
    /// the lowered factors, which realizes the Gram-determinant extension of
    /// the metric to Λ^q.
    pub fn flat(&self, q: &MultiVector) -> Result<Form, CalcError> {
        self.check_dim(q.dim())?;
        let mut out = Form::zero(self.dim, q.grade());
        for (idx, p) in q.terms() {
            let mut partial = Form::scalar(self.dim, Polynomial::one(self.dim));
            for &axis in idx.indices() {
                partial = partial.wedge(&self.lowered_axis(axis))?;
            }
            out = &out + &partial.scale_poly(p);
        }
        Ok(out)
    }

    /// Index raising, inverse to [`Metric::flat`].
    pub fn sharp(&self, alpha: &Form) -> Result<MultiVector, CalcError> {
        self.check_dim(alpha.dim())?;
        let mut out = MultiVector::zero(self.dim, alpha.grade());
        for (idx, p) in alpha.terms() {
            let mut partial = MultiVector::scalar(self.dim, Polynomial::one(self.dim));
            for &axis in idx.indices() {
                partial = partial.wedge(&self.raised_axis(axis))?;
            }
            out = &out + &partial.scale_poly(p);
        }
        Ok(out)
    }

    fn lowered_axis(&self, axis: u8) -> Form {
        let mut out = Form::zero(self.dim, 1);
        for j in 0..self.dim {
            let c = self.g.at(axis as usize - 1, j);
            if !c.is_zero() {
                out.add_term(
                    MultiIndex::single(j as u8 + 1),
                    Polynomial::constant(self.dim, c.clone()),
                );
            }
        }
        out
    }

    fn raised_axis(&self, axis: u8) -> MultiVector {
        let mut out = MultiVector::zero(self.dim, 1);
        for j in 0..self.dim {
            let c = self.ginv.at(axis as usize - 1, j);
            if !c.is_zero() {
                out.add_term(
                    MultiIndex::single(j as u8 + 1),
                    Polynomial::constant(self.dim, c.clone()),
                );
            }
        }
        out
    }

    /// Gram determinant of the inverse metric on two multi-indices; the
    /// matrix entry of the induced metric on grade-l forms.
    fn gram_forms(&self, a: &MultiIndex, b: &MultiIndex) -> Rational {
        if self.diagonal {
            if a != b {
                return Rational::zero();
            }
            let mut prod = Rational::from_integer(1.into());
            for &i in a.indices() {
                prod *= self.ginv.at(i as usize - 1, i as usize - 1);
            }
            return prod;
        }
        let k = a.grade();
        QMatrix::from_fn(k, k, |r, c| {
            self.ginv
                .at(
                    a.indices()[r] as usize - 1,
                    b.indices()[c] as usize - 1,
                )
                .clone()
        })
        .det()
    }

    /// Symmetric bilinear inner product on same-grade forms, extended from
    /// the inverse metric on covectors via Gram determinants.
    pub fn inner(&self, a: &Form, b: &Form) -> Result<Polynomial, CalcError> {
        self.check_dim(a.dim())?;
        self.check_dim(b.dim())?;
        if a.grade() != b.grade() {
            return Err(CalcError::GradeMismatch {
                expected: a.grade(),
                found: b.grade(),
            });
        }
        let mut out = Polynomial::zero(self.dim);
        for (ia, pa) in a.terms() {
            for (ib, pb) in b.terms() {
                let w = self.gram_forms(ia, ib);
                if !w.is_zero() {
                    out = out.try_add(&(pa * pb).scale(&w))?;
                }
            }
        }
        Ok(out)
    }

    /// Inner product on same-grade multivectors, via the metric itself.
    pub fn inner_multivector(
        &self,
        a: &MultiVector,
        b: &MultiVector,
    ) -> Result<Polynomial, CalcError> {
        self.inner(&self.flat(a)?, &self.flat(b)?)
    }

    /// Hodge star: the unique (n−l)-form with `β ∧ ⋆α = g(β, α) Vol` for all
    /// l-forms β. Requires a positive-definite metric with rational
    /// `sqrt(det g)`.
    pub fn star(&self, alpha: &Form) -> Result<Form, CalcError> {
        self.check_dim(alpha.dim())?;
        if !self.riemannian {
            return Err(CalcError::NotRiemannian);
        }
        let s = self.sqrt_det.clone().ok_or(CalcError::IrrationalVolume)?;
        let l = alpha.grade();
        if l > self.dim {
            return Ok(Form::zero(self.dim, 0));
        }
        let mut out = Form::zero(self.dim, self.dim - l);
        if self.diagonal {
            for (idx, p) in alpha.terms() {
                let w = self.gram_forms(idx, idx);
                let (sign, comp) = idx.complement(self.dim);
                out.add_term(comp, p.scale(&(&w * &s * Rational::from_integer(sign.into()))));
            }
            return Ok(out);
        }
        for k in MultiIndex::all(self.dim, l) {
            let mut c = Polynomial::zero(self.dim);
            for (idx, p) in alpha.terms() {
                let w = self.gram_forms(&k, idx);
                if !w.is_zero() {
                    c = c.try_add(&p.scale(&w))?;
                }
            }
            if c.is_zero() {
                continue;
            }
            let (sign, comp) = k.complement(self.dim);
            out.add_term(comp, c.scale(&(&s * Rational::from_integer(sign.into()))));
        }
        Ok(out)
    }

    fn check_dim(&self, other: usize) -> Result<(), CalcError> {
        if self.dim != other {
            return Err(CalcError::DimensionMismatch {
                expected: self.dim,
                found: other,
            });
        }
        Ok(())
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// Holds the outcome of testing the four contraction/star identities
///
/// 1. `⋆(Q⌟α) = (−1)^{q(l−q)} Q♭ ∧ ⋆α`
/// 2. `⋆(Q⌟⋆α) = (−1)^{q(n−l−q)+l(n−l)} Q♭ ∧ α`
/// 3. `Q⌟α = (−1)^{(l−q)(n−l)} ⋆(Q♭ ∧ ⋆α)`
/// 4. `Q⌟⋆α = (−1)^{lq} ⋆(Q♭ ∧ α)`
///
/// Out-of-range grade combinations make both sides vanish and count as
/// holding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ContractionIdentityReport {
    pub identities: [bool; 4],
}

impl ContractionIdentityReport {
    pub fn all_hold(&self) -> bool {
        self.identities.iter().all(|&b| b)
    }
}

/// Evaluates both sides of the four identities exactly.
pub fn check_contraction_identities(
    g: &Metric,
    q: &MultiVector,
    alpha: &Form,
) -> Result<ContractionIdentityReport, CalcError> {
    let n = g.dim() as i64;
    let qg = q.grade() as i64;
    let l = alpha.grade() as i64;
    let q_flat = g.flat(q)?;
    let star_alpha = g.star(alpha)?;

    // 1: star(Q ⌟ alpha) vs sign * Q_flat ^ star(alpha)
    let lhs1 = g.star(&contract(q, alpha)?)?;
    let rhs1 = q_flat
        .wedge(&star_alpha)?
        .scale(&parity_rat(qg * (l - qg)));
    let id1 = eq_or_both_zero(&lhs1, &rhs1);

    // 2: star(Q ⌟ star(alpha)) vs sign * Q_flat ^ alpha
    let lhs2 = g.star(&contract(q, &star_alpha)?)?;
    let rhs2 = q_flat
        .wedge(alpha)?
        .scale(&parity_rat(qg * (n - l - qg) + l * (n - l)));
    let id2 = eq_or_both_zero(&lhs2, &rhs2);

    // 3: Q ⌟ alpha vs sign * star(Q_flat ^ star(alpha))
    let lhs3 = contract(q, alpha)?;
    let rhs3 = g
        .star(&q_flat.wedge(&star_alpha)?)?
        .scale(&parity_rat((l - qg) * (n - l)));
    let id3 = eq_or_both_zero(&lhs3, &rhs3);

    // 4: Q ⌟ star(alpha) vs sign * star(Q_flat ^ alpha)
    let lhs4 = contract(q, &star_alpha)?;
    let rhs4 = g.star(&q_flat.wedge(alpha)?)?.scale(&parity_rat(l * qg));
    let id4 = eq_or_both_zero(&lhs4, &rhs4);

    Ok(ContractionIdentityReport {
        identities: [id1, id2, id3, id4],
    })
}

/// Recovered metric and the residual of rechecking the defining relation
/// `(∂i⌟φ)∧(∂j⌟φ)∧φ = 6 g_ij Vol` with `Vol = sqrt(det g) dx1..7`.
#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub g: Vec<Vec<f64>>,
    pub residual: f64,
}

impl MetricReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "g": self.g, "residual": self.residual })
    }
}

/// Recovers the metric determined by a constant generic 3-form on ℝ⁷.
///
/// Build `B_ij` from `(∂i⌟φ)∧(∂j⌟φ)∧φ = B_ij dx1..7`. The defining relation
/// forces `B = 6 g sqrt(det g)`, hence `det B = 6⁷ (det g)^{9/2}`, so the
/// normalization used here is `g = B / (6 (det B / 6⁷)^{1/9})`. The ninth
/// root makes this the one floating-point computation in the crate. The
/// defining relation pins the normalization only implicitly; the derivation
/// above is this implementation's own, and the recheck residual reports how
/// well the output satisfies the relation.
pub fn recover_metric(phi: &Form) -> Result<MetricReport, CalcError> {
    if phi.dim() != 7 {
        return Err(CalcError::DimensionMismatch {
            expected: 7,
            found: phi.dim(),
        });
    }
    if phi.grade() != 3 {
        return Err(CalcError::GradeMismatch {
            expected: 3,
            found: phi.grade(),
        });
    }
    if !phi.has_constant_coefficients() {
        return Err(CalcError::NonConstantCoefficients);
    }
    let top = MultiIndex::new(&[1, 2, 3, 4, 5, 6, 7]).unwrap();
    let mut b = QMatrix::zeros(7, 7);
    for i in 0..7 {
        for j in 0..7 {
            let ci = contract(&coordinate_vector(7, i as u8 + 1), phi)?;
            let cj = contract(&coordinate_vector(7, j as u8 + 1), phi)?;
            let w = ci.wedge(&cj)?.wedge(phi)?;
            let coeff = w
                .coeff(&top)
                .and_then(|p| p.as_constant())
                .unwrap_or_else(Rational::zero);
            *b.at_mut(i, j) = coeff;
        }
    }
    let det_b = b.det();
    if !det_b.is_positive() {
        return Err(CalcError::NonGenericThreeForm);
    }
    let det_b_f = det_b.to_f64().ok_or(CalcError::NonGenericThreeForm)?;
    let scale = 6.0 * (det_b_f / 6f64.powi(7)).powf(1.0 / 9.0);
    let g: Vec<Vec<f64>> = (0..7)
        .map(|i| {
            (0..7)
                .map(|j| b.at(i, j).to_f64().unwrap_or(f64::NAN) / scale)
                .collect()
        })
        .collect();
    let sqrt_det_g = det_f64(&g).sqrt();
    let mut residual: f64 = 0.0;
    for i in 0..7 {
        for j in i..7 {
            let lhs = b.at(i, j).to_f64().unwrap_or(f64::NAN);
            let rhs = 6.0 * g[i][j] * sqrt_det_g;
            residual = residual.max((lhs - rhs).abs());
        }
    }
    Ok(MetricReport { g, residual })
}

fn det_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            for j in col..n {
                a[i][j] -= f * a[col][j];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2;
    use crate::rat;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn form(idx: &[u8]) -> Form {
        Form::basis(7, idx).unwrap()
    }

    fn mv(idx: &[u8]) -> MultiVector {
        MultiVector::basis(7, idx).unwrap()
    }

    fn random_form(rng: &mut StdRng, grade: usize) -> Form {
        let all = MultiIndex::all(7, grade);
        let mut out = Form::zero(7, grade);
        for _ in 0..rng.gen_range(1..=3) {
            let idx = all[rng.gen_range(0..all.len())].clone();
            out.add_term(idx, Polynomial::constant(7, rat(rng.gen_range(-3..=3), 1)));
        }
        out
    }

    fn diag_metric() -> Metric {
        // det = 4, sqrt(det) = 2: star stays exact
        Metric::diag(vec![
            rat(2, 1),
            rat(2, 1),
            rat(1, 1),
            rat(1, 1),
            rat(1, 1),
            rat(1, 1),
            rat(1, 1),
        ])
        .unwrap()
    }

    #[test]
    fn flat_and_sharp_on_euclidean_basis() {
        let g = Metric::euclidean(7);
        assert_eq!(g.flat(&mv(&[6, 7])).unwrap(), form(&[6, 7]));
        let f = MultiVector::scalar(7, Polynomial::var(7, 1));
        assert_eq!(
            g.flat(&f).unwrap(),
            Form::scalar(7, Polynomial::var(7, 1))
        );
        assert_eq!(g.sharp(&form(&[2, 3])).unwrap(), mv(&[2, 3]));
    }

    #[test]
    fn flat_and_sharp_scale_with_the_metric() {
        let mut entries = vec![rat(1, 1); 7];
        entries[0] = rat(2, 1);
        let g = Metric::diag(entries).unwrap();
        assert_eq!(
            g.flat(&mv(&[1])).unwrap(),
            form(&[1]).scale(&rat(2, 1))
        );
        assert_eq!(
            g.sharp(&form(&[1])).unwrap(),
            mv(&[1]).scale(&rat(1, 2))
        );
    }

    #[test]
    fn flat_matches_gram_determinant_oracle() {
        // flat(∂_I) coefficient at dx_J must be det g[I,J]
        let g = diag_metric();
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..50 {
            let grade = rng.gen_range(1..=3);
            let all = MultiIndex::all(7, grade);
            let i = all[rng.gen_range(0..all.len())].clone();
            let lowered = g
                .flat(&MultiVector::from_terms(
                    7,
                    grade,
                    [(i.clone(), Polynomial::one(7))],
                ))
                .unwrap();
            for j in &all {
                let want = QMatrix::from_fn(grade, grade, |r, c| {
                    g.matrix()
                        .at(i.indices()[r] as usize - 1, j.indices()[c] as usize - 1)
                        .clone()
                })
                .det();
                let got = lowered
                    .coeff(j)
                    .and_then(|p| p.as_constant())
                    .unwrap_or_else(Rational::zero);
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn flat_sharp_are_mutually_inverse() {
        let mut rng = StdRng::seed_from_u64(13);
        for g in [Metric::euclidean(7), diag_metric()] {
            for _ in 0..100 {
                let grade = rng.gen_range(0..=4);
                let alpha = random_form(&mut rng, grade);
                assert_eq!(g.flat(&g.sharp(&alpha).unwrap()).unwrap(), alpha);
            }
        }
    }

    #[test]
    fn star_of_phi0_is_the_canonical_four_form() {
        let g = Metric::euclidean(7);
        assert_eq!(g.star(&g2::phi0()).unwrap(), g2::star_phi0());
    }

    #[test]
    fn star_star_is_plus_minus_identity() {
        let mut rng = StdRng::seed_from_u64(17);
        for g in [Metric::euclidean(7), diag_metric()] {
            for l in 0..=7 {
                for _ in 0..20 {
                    let alpha = random_form(&mut rng, l);
                    let ss = g.star(&g.star(&alpha).unwrap()).unwrap();
                    assert_eq!(ss, alpha.scale(&parity_rat((l * (7 - l)) as i64)));
                }
            }
        }
    }

    #[test]
    fn star_on_single_basis_form() {
        let g = Metric::euclidean(7);
        assert_eq!(g.star(&form(&[1, 2, 3, 6, 7])).unwrap(), form(&[4, 5]));
    }

    #[test]
    fn star_satisfies_its_defining_identity() {
        // β ∧ ⋆α = g(β, α) Vol, exactly
        let mut rng = StdRng::seed_from_u64(19);
        for g in [Metric::euclidean(7), diag_metric()] {
            let vol = g.vol().unwrap();
            for l in 0..=7 {
                for _ in 0..20 {
                    let alpha = random_form(&mut rng, l);
                    let beta = random_form(&mut rng, l);
                    let lhs = beta.wedge(&g.star(&alpha).unwrap()).unwrap();
                    let rhs = vol.scale_poly(&g.inner(&beta, &alpha).unwrap());
                    assert!(eq_or_both_zero(&lhs, &rhs));
                }
            }
        }
    }

    #[test]
    fn star_is_an_isometry() {
        let mut rng = StdRng::seed_from_u64(29);
        for g in [Metric::euclidean(7), diag_metric()] {
            for l in 0..=7 {
                for _ in 0..15 {
                    let a = random_form(&mut rng, l);
                    let b = random_form(&mut rng, l);
                    assert_eq!(
                        g.inner(&g.star(&a).unwrap(), &g.star(&b).unwrap()).unwrap(),
                        g.inner(&a, &b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn inner_examples() {
        let g = Metric::euclidean(7);
        assert_eq!(
            g.inner(&form(&[1, 2]), &form(&[1, 2])).unwrap(),
            Polynomial::one(7)
        );
        assert!(g.inner(&form(&[1, 2]), &form(&[1, 3])).unwrap().is_zero());
        let q_phi = contract(&mv(&[6, 7]), &g2::phi0()).unwrap();
        assert_eq!(g.inner(&q_phi, &q_phi).unwrap(), Polynomial::one(7));
    }

    #[test]
    fn contraction_identities_on_worked_example() {
        let g = Metric::euclidean(7);
        let rep = check_contraction_identities(&g, &mv(&[6, 7]), &g2::phi0()).unwrap();
        assert!(rep.all_hold());
        // identity 4 concretely: Q ⌟ ⋆φ₀ = ⋆(dx67 ∧ φ₀)
        let lhs = contract(&mv(&[6, 7]), &g2::star_phi0()).unwrap();
        let rhs = g.star(&form(&[6, 7]).wedge(&g2::phi0()).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_identities_for_grade_zero_reduce_to_linearity() {
        let g = Metric::euclidean(7);
        let f = MultiVector::constant(7, rat(5, 1));
        let alpha = form(&[1, 4, 5]);
        let rep = check_contraction_identities(&g, &f, &alpha).unwrap();
        assert!(rep.all_hold());
        assert_eq!(
            g.star(&contract(&f, &alpha).unwrap()).unwrap(),
            g.star(&alpha).unwrap().scale(&rat(5, 1))
        );
    }

    #[test]
    fn contraction_identities_random_all_grades() {
        let mut rng = StdRng::seed_from_u64(31);
        for g in [Metric::euclidean(7), diag_metric()] {
            for _ in 0..200 {
                let qg = rng.gen_range(0..=3);
                let l = rng.gen_range(qg..=7);
                let q = {
                    let all = MultiIndex::all(7, qg);
                    let mut out = MultiVector::zero(7, qg);
                    for _ in 0..rng.gen_range(1..=2) {
                        let idx = all[rng.gen_range(0..all.len())].clone();
                        out.add_term(idx, Polynomial::constant(7, rat(rng.gen_range(-3..=3), 1)));
                    }
                    out
                };
                let alpha = random_form(&mut rng, l);
                let rep = check_contraction_identities(&g, &q, &alpha).unwrap();
                assert!(rep.all_hold(), "q={qg} l={l}");
            }
        }
    }

    #[test]
    fn contraction_identities_out_of_range_grades_give_zeros() {
        let g = Metric::euclidean(7);
        let q = mv(&[1, 2, 3]);
        let alpha = form(&[4]);
        let rep = check_contraction_identities(&g, &q, &alpha).unwrap();
        assert!(rep.all_hold());
    }

    #[test]
    fn sharp_of_flat_is_identity_on_multivectors() {
        let mut rng = StdRng::seed_from_u64(47);
        for g in [Metric::euclidean(7), diag_metric()] {
            for _ in 0..50 {
                let grade = rng.gen_range(0..=3);
                let all = MultiIndex::all(7, grade);
                let mut q = MultiVector::zero(7, grade);
                for _ in 0..rng.gen_range(1..=3) {
                    let idx = all[rng.gen_range(0..all.len())].clone();
                    q.add_term(idx, Polynomial::constant(7, rat(rng.gen_range(-3..=3), 1)));
                }
                assert_eq!(g.sharp(&g.flat(&q).unwrap()).unwrap(), q);
            }
        }
    }

    fn skew_metric() -> Metric {
        // non-diagonal with determinant 1, so the star stays exact
        let mut rows = vec![vec![rat(0, 1); 7]; 7];
        for i in 0..7 {
            rows[i][i] = rat(1, 1);
        }
        rows[0][0] = rat(2, 1);
        rows[0][1] = rat(1, 1);
        rows[1][0] = rat(1, 1);
        rows[1][1] = rat(1, 1);
        Metric::new(rows).unwrap()
    }

    #[test]
    fn non_diagonal_metric_star_and_identities() {
        let g = skew_metric();
        assert_eq!(g.det(), &rat(1, 1));
        assert!(g.is_riemannian());
        let vol = g.vol().unwrap();
        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..30 {
            let l = rng.gen_range(0..=7);
            let alpha = random_form(&mut rng, l);
            let beta = random_form(&mut rng, l);
            // defining identity of the star
            let lhs = beta.wedge(&g.star(&alpha).unwrap()).unwrap();
            let rhs = vol.scale_poly(&g.inner(&beta, &alpha).unwrap());
            assert!(eq_or_both_zero(&lhs, &rhs));
            // star-star involution
            assert_eq!(
                g.star(&g.star(&alpha).unwrap()).unwrap(),
                alpha.scale(&parity_rat((l * (7 - l)) as i64))
            );
        }
        for _ in 0..30 {
            let qg = rng.gen_range(0..=2);
            let l = rng.gen_range(0..=5);
            let all = MultiIndex::all(7, qg);
            let mut q = MultiVector::zero(7, qg);
            q.add_term(
                all[rng.gen_range(0..all.len())].clone(),
                Polynomial::constant(7, rat(rng.gen_range(-2..=2), 1)),
            );
            let alpha = random_form(&mut rng, l);
            let rep = check_contraction_identities(&g, &q, &alpha).unwrap();
            assert!(rep.all_hold(), "q={qg}, l={l}");
        }
    }

    #[test]
    fn metric_report_serializes_to_the_documented_shape() {
        let rep = recover_metric(&g2::phi0()).unwrap();
        let json = rep.to_json();
        assert!(json["g"].as_array().unwrap().len() == 7);
        assert!(json["residual"].as_f64().unwrap() < 1e-12);
    }

    #[test]
    fn recover_metric_of_phi0_is_the_identity() {
        let rep = recover_metric(&g2::phi0()).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((rep.g[i][j] - want).abs() < 1e-12);
            }
        }
        assert!(rep.residual < 1e-12);
    }

    #[test]
    fn recover_metric_of_scaled_phi0_resatisfies_the_relation() {
        let rep = recover_metric(&g2::phi0().scale(&rat(8, 1))).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                let want = if i == j { 4.0 } else { 0.0 };
                assert!((rep.g[i][j] - want).abs() < 1e-9);
            }
        }
        assert!(rep.residual < 1e-10);
    }

    #[test]
    fn recover_metric_rejects_decomposable_three_form() {
        let phi = form(&[1, 2, 3]);
        assert!(matches!(
            recover_metric(&phi),
            Err(CalcError::NonGenericThreeForm)
        ));
    }

    #[test]
    fn irrational_volume_is_rejected() {
        let mut entries = vec![rat(1, 1); 7];
        entries[0] = rat(2, 1); // det = 2, sqrt irrational
        let g = Metric::diag(entries).unwrap();
        assert!(matches!(g.vol(), Err(CalcError::IrrationalVolume)));
        assert!(matches!(
            g.star(&form(&[1])),
            Err(CalcError::IrrationalVolume)
        ));
        // flat and sharp remain available
        assert!(g.flat(&mv(&[1])).is_ok());
    }

    #[test]
    fn non_riemannian_star_is_rejected() {
        let mut entries = vec![rat(1, 1); 7];
        entries[0] = rat(-1, 1);
        let g = Metric::diag(entries).unwrap();
        assert!(matches!(g.star(&form(&[1])), Err(CalcError::NotRiemannian)));
    }

    #[test]
    fn singular_metric_is_rejected_at_construction() {
        let mut entries = vec![rat(1, 1); 7];
        entries[3] = rat(0, 1);
        assert!(matches!(
            Metric::diag(entries),
            Err(CalcError::SingularMetric)
        ));
    }
}
