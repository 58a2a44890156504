//! The G₂-specific layer on ℝ⁷: the canonical 3-form and its star, the
//! 2-fold cross product, the Ω²₇/Ω²₁₄ projections, the constructive inverse
//! of the degree-4 contraction map on 2-multivectors, and the Rochesterian /
//! coRochesterian classifiers.
//!
//! "Rochesterian" is Hamiltonian with respect to the degree-3 structure φ;
//! "coRochesterian" is Hamiltonian with respect to the degree-4 structure ⋆φ.
//!
//! Everything here is pointwise algebra over polynomial coefficients on ℝ⁷.
//! Global statements over closed manifolds (where integration forces, e.g.,
//! exact contractions of vector fields to vanish) are out of scope; on ℝ⁷
//! the classifiers exhibit the opposite behavior, with `e6^e7` a nonzero
//! 2-multivector field that is simultaneously Rochesterian and
//! coRochesterian. The pointwise ingredients of those global arguments (the
//! norm identity, the metric expansion of double contractions) are
//! implemented and verified below.

use std::fmt;

use crate::error::CalcError;
use crate::exterior::{contract, coordinate_vector, eq_or_both_zero, Form, MultiIndex, MultiVector};
use crate::hodge::{recover_metric, Metric};
use crate::linalg::QMatrix;
use crate::msymp::{MsympStructure, SolveStatus};
use crate::polyring::Polynomial;
use crate::rat;

/// The canonical G₂ 3-form
/// `dx123 + dx145 + dx167 + dx246 - dx257 - dx347 - dx356`.
pub fn phi0() -> Form {
    signed_basis_sum(
        3,
        &[
            (&[1, 2, 3], 1),
            (&[1, 4, 5], 1),
            (&[1, 6, 7], 1),
            (&[2, 4, 6], 1),
            (&[2, 5, 7], -1),
            (&[3, 4, 7], -1),
            (&[3, 5, 6], -1),
        ],
    )
}

/// The canonical 4-form
/// `dx4567 + dx2367 + dx2345 + dx1357 - dx1346 - dx1256 - dx1247`,
/// the Euclidean Hodge star of [`phi0`].
pub fn star_phi0() -> Form {
    signed_basis_sum(
        4,
        &[
            (&[4, 5, 6, 7], 1),
            (&[2, 3, 6, 7], 1),
            (&[2, 3, 4, 5], 1),
            (&[1, 3, 5, 7], 1),
            (&[1, 3, 4, 6], -1),
            (&[1, 2, 5, 6], -1),
            (&[1, 2, 4, 7], -1),
        ],
    )
}

fn signed_basis_sum(grade: usize, terms: &[(&[u8], i64)]) -> Form {
    let mut out = Form::zero(7, grade);
    for (idx, sign) in terms {
        out.add_term(
            MultiIndex::new(idx).expect("increasing indices"),
            Polynomial::constant(7, rat(*sign, 1)),
        );
    }
    out
}

/// Immutable bundle of the standard flat G₂ geometry on ℝ⁷.
#[derive(Debug, Clone)]
pub struct G2Context {
    phi: Form,
    star_phi: Form,
    metric: Metric,
    vol: Form,
    msymp3: MsympStructure,
    msymp4: MsympStructure,
}

impl G2Context {
    /// Builds the canonical context and checks its invariants: both forms
    /// are closed, the star of φ equals the stored 4-form exactly, the
    /// recovered metric is the identity, and both structures are
    /// nondegenerate.
    pub fn standard() -> Self {
        let phi = phi0();
        let star_phi = star_phi0();
        let metric = Metric::euclidean(7);
        assert!(phi.d().is_zero());
        assert!(star_phi.d().is_zero());
        assert_eq!(
            metric.star(&phi).expect("Euclidean star"),
            star_phi,
            "star of the 3-form must be the canonical 4-form"
        );
        let report = recover_metric(&phi).expect("generic 3-form");
        for (i, row) in report.g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-12, "recovered metric not identity");
            }
        }
        assert!(report.residual < 1e-12);
        let vol = metric.vol().expect("unit determinant");
        let msymp3 = MsympStructure::build(phi.clone()).expect("nondegenerate 3-form");
        let msymp4 = MsympStructure::build(star_phi.clone()).expect("nondegenerate 4-form");
        G2Context {
            phi,
            star_phi,
            metric,
            vol,
            msymp3,
            msymp4,
        }
    }

    pub fn phi(&self) -> &Form {
        &self.phi
    }

    pub fn star_phi(&self) -> &Form {
        &self.star_phi
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn vol(&self) -> &Form {
        &self.vol
    }

    /// The degree-3 multisymplectic structure over φ.
    pub fn structure_phi(&self) -> &MsympStructure {
        &self.msymp3
    }

    /// The degree-4 multisymplectic structure over ⋆φ.
    pub fn structure_star_phi(&self) -> &MsympStructure {
        &self.msymp4
    }

    /// 2-fold cross product: `X × Y = ((X ∧ Y) ⌟ φ)♯`, so that
    /// `g(X × Y, Z) = φ(X, Y, Z)` for every Z.
    pub fn cross(&self, x: &MultiVector, y: &MultiVector) -> Result<MultiVector, CalcError> {
        if x.grade() != 1 || y.grade() != 1 {
            return Err(CalcError::GradeOutOfRange {
                grade: x.grade().max(y.grade()),
            });
        }
        let one_form = contract(&x.wedge(y)?, &self.phi)?;
        self.metric.sharp(&one_form)
    }

    /// `⋆(φ ∧ β)`, the operator that separates the two irreducible summands
    /// of a 2-form: it acts as +2 on Ω²₇ and as −1 on Ω²₁₄.
    pub fn star_phi_wedge(&self, beta: &Form) -> Result<Form, CalcError> {
        self.metric.star(&self.phi.wedge(beta)?)
    }

    /// Splits a 2-form into its Ω²₇ and Ω²₁₄ components:
    /// `π₇(β) = (β + ⋆(φ∧β))/3` and `π₁₄(β) = (2β − ⋆(φ∧β))/3`.
    pub fn split2(&self, beta: &Form) -> Result<TwoFormSplit, CalcError> {
        if beta.grade() != 2 {
            return Err(CalcError::GradeMismatch {
                expected: 2,
                found: beta.grade(),
            });
        }
        let sw = self.star_phi_wedge(beta)?;
        let third = rat(1, 3);
        let beta7 = (&sw + beta).scale(&third);
        let beta14 = (&beta.scale(&rat(2, 1)) - &sw).scale(&third);
        Ok(TwoFormSplit { beta7, beta14 })
    }

    pub fn pi7(&self, beta: &Form) -> Result<Form, CalcError> {
        Ok(self.split2(beta)?.beta7)
    }

    pub fn pi14(&self, beta: &Form) -> Result<Form, CalcError> {
        Ok(self.split2(beta)?.beta14)
    }

    /// The constructive inverse of `Q ↦ Q ⌟ ⋆φ` on 2-multivector fields:
    /// `Q = ½ β₇♯ − β₁₄♯` satisfies `Q ⌟ ⋆φ = β` exactly.
    pub fn invert_starphi2(&self, beta: &Form) -> Result<MultiVector, CalcError> {
        let split = self.split2(beta)?;
        let q = &self
            .metric
            .sharp(&split.beta7)?
            .scale(&rat(1, 2))
            - &self.metric.sharp(&split.beta14)?;
        debug_assert_eq!(&contract(&q, &self.star_phi)?, beta);
        Ok(q)
    }

    /// Classifies a 1- or 2-multivector field against the degree-3
    /// structure: is `Q ⌟ φ` closed, and is it exact (with witness)?
    pub fn classify_rochesterian_multivector(
        &self,
        q: &MultiVector,
    ) -> Result<Classification, CalcError> {
        if q.grade() < 1 || q.grade() > 2 {
            return Err(CalcError::GradeOutOfRange { grade: q.grade() });
        }
        self.classify_multivector(q, &self.phi)
    }

    /// Classifies a 1-, 2- or 3-multivector field against the degree-4
    /// structure.
    pub fn classify_corochesterian_multivector(
        &self,
        q: &MultiVector,
    ) -> Result<Classification, CalcError> {
        if q.grade() < 1 || q.grade() > 3 {
            return Err(CalcError::GradeOutOfRange { grade: q.grade() });
        }
        self.classify_multivector(q, &self.star_phi)
    }

    fn classify_multivector(
        &self,
        q: &MultiVector,
        omega: &Form,
    ) -> Result<Classification, CalcError> {
        let tau = contract(q, omega)?;
        let closed = tau.d().is_zero();
        let witness = if tau.is_zero() {
            Some(Witness::Form(Form::zero(7, tau.grade().saturating_sub(1))))
        } else {
            tau.exact_potential().map(Witness::Form)
        };
        let member = closed && witness.is_some();
        Ok(Classification {
            object: q.to_string(),
            closed_contraction: Some(closed),
            member,
            witness: if member { witness } else { None },
        })
    }

    /// Classifies a 0- or 1-form against the degree-3 structure. Membership
    /// of a 1-form is decided by the projection criterion `π₁₄(dα) = 0`
    /// and cross-checked against the linear solver, which also produces the
    /// witness vector field.
    pub fn classify_rochesterian_form(&self, alpha: &Form) -> Result<Classification, CalcError> {
        match alpha.grade() {
            0 => {
                let solved = self.msymp3.solve_hamiltonian(alpha)?;
                Ok(Classification {
                    object: alpha.to_string(),
                    closed_contraction: None,
                    member: solved.status != SolveStatus::None,
                    witness: solved.particular.map(Witness::MultiVector),
                })
            }
            1 => {
                let member = self.pi14(&alpha.d())?.is_zero();
                let solved = self.msymp3.solve_hamiltonian(alpha)?;
                assert_eq!(
                    member,
                    solved.status != SolveStatus::None,
                    "projection criterion and solver must agree"
                );
                Ok(Classification {
                    object: alpha.to_string(),
                    closed_contraction: None,
                    member,
                    witness: if member {
                        solved.particular.map(Witness::MultiVector)
                    } else {
                        None
                    },
                })
            }
            g => Err(CalcError::GradeOutOfRange { grade: g }),
        }
    }

    /// Classifies a 0-, 1- or 2-form against the degree-4 structure. Every
    /// 1-form is a member because `Q ↦ Q ⌟ ⋆φ` is a bijection on grade 2;
    /// the witness comes from the constructive inverse.
    pub fn classify_corochesterian_form(&self, alpha: &Form) -> Result<Classification, CalcError> {
        match alpha.grade() {
            0 | 2 => {
                let solved = self.msymp4.solve_hamiltonian(alpha)?;
                Ok(Classification {
                    object: alpha.to_string(),
                    closed_contraction: None,
                    member: solved.status != SolveStatus::None,
                    witness: solved.particular.map(Witness::MultiVector),
                })
            }
            1 => {
                let q = self.invert_starphi2(&alpha.d())?;
                debug_assert_eq!(contract(&q, &self.star_phi)?, alpha.d());
                Ok(Classification {
                    object: alpha.to_string(),
                    closed_contraction: None,
                    member: true,
                    witness: Some(Witness::MultiVector(q)),
                })
            }
            g => Err(CalcError::GradeOutOfRange { grade: g }),
        }
    }

    /// Pointwise norm identity for a 2-multivector field:
    /// `(Q⌟⋆φ) ∧ (Q⌟φ) ∧ ⋆φ = 2 |Q⌟φ|² Vol`, along with the intermediate
    /// step `|(Q⌟φ) ∧ ⋆φ|² = 3 |Q⌟φ|²`.
    pub fn check_norm_identity(&self, q: &MultiVector) -> Result<NormIdentityReport, CalcError> {
        if q.grade() != 2 {
            return Err(CalcError::GradeOutOfRange { grade: q.grade() });
        }
        let q_phi = contract(q, &self.phi)?;
        let q_star_phi = contract(q, &self.star_phi)?;
        let lhs = q_star_phi.wedge(&q_phi)?.wedge(&self.star_phi)?;
        let norm_sq = self.metric.inner(&q_phi, &q_phi)?;
        let rhs = self.vol.scale_poly(&norm_sq.scale(&rat(2, 1)));
        let equal = eq_or_both_zero(&lhs, &rhs);
        let five = q_phi.wedge(&self.star_phi)?;
        let intermediate_holds =
            self.metric.inner(&five, &five)? == norm_sq.scale(&rat(3, 1));
        Ok(NormIdentityReport {
            lhs,
            rhs,
            equal,
            intermediate_holds,
        })
    }

    /// Verifies the pointwise linear-algebra content behind the space
    /// identifications: ranks and kernel dimensions of the contraction maps,
    /// the Ω²₇/Ω²₁₄ dimensions, membership of the image of `X ↦ X⌟φ` in
    /// Ω²₇, the kernel of the degree-3 grade-2 map lying flat in Ω²₁₄, and
    /// the injection `X ↦ (X⌟φ = U⌟⋆φ)` round-tripping on basis vectors.
    pub fn theorem_identification_report(&self) -> Result<IdentificationReport, CalcError> {
        let rank_phi1 = self.msymp3.map(1).unwrap().rank;
        let phi2 = self.msymp3.map(2).unwrap();
        let starphi2 = self.msymp4.map(2).unwrap();

        // dimensions of the two irreducible summands, as ranks of the
        // projection matrices on the 21-dimensional fiber of 2-forms
        let basis2 = MultiIndex::all(7, 2);
        let mut m7 = QMatrix::zeros(21, 21);
        let mut m14 = QMatrix::zeros(21, 21);
        for (c, ci) in basis2.iter().enumerate() {
            let split = self.split2(&Form::basis(7, ci.indices())?)?;
            for (r, ri) in basis2.iter().enumerate() {
                if let Some(p) = split.beta7.coeff(ri) {
                    *m7.at_mut(r, c) = p.as_constant().expect("constant");
                }
                if let Some(p) = split.beta14.coeff(ri) {
                    *m14.at_mut(r, c) = p.as_constant().expect("constant");
                }
            }
        }

        let mut image_phi1_in_omega27 = true;
        let mut injection_roundtrips = true;
        for i in 1..=7 {
            let beta = contract(&coordinate_vector(7, i), &self.phi)?;
            // membership equation of the 7-dimensional summand
            if self.star_phi_wedge(&beta)? != beta.scale(&rat(2, 1)) {
                image_phi1_in_omega27 = false;
            }
            let u = self.invert_starphi2(&beta)?;
            if contract(&u, &self.star_phi)? != beta {
                injection_roundtrips = false;
            }
        }

        let mut ker_phi2_flat_in_omega214 = true;
        for kern in &phi2.kernel {
            let lowered = self.metric.flat(kern)?;
            if self.star_phi_wedge(&lowered)? != -&lowered {
                ker_phi2_flat_in_omega214 = false;
            }
        }

        Ok(IdentificationReport {
            rank_phi1,
            rank_phi2: phi2.rank,
            ker_phi2_dim: phi2.kernel.len(),
            rank_starphi2: starphi2.rank,
            ker_starphi2_dim: starphi2.kernel.len(),
            dim_omega27: m7.rank(),
            dim_omega214: m14.rank(),
            image_phi1_in_omega27,
            ker_phi2_flat_in_omega214,
            injection_roundtrips,
        })
    }
}

/// A 2-form split into its irreducible G₂ components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFormSplit {
    pub beta7: Form,
    pub beta14: Form,
}

/// Witness object attached to a positive classification: the potential form
/// for a multivector input, the Hamiltonian multivector for a form input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Form(Form),
    MultiVector(MultiVector),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Form(a) => write!(f, "{a}"),
            Witness::MultiVector(q) => write!(f, "{q}"),
        }
    }
}

/// Result of one classifier run.
#[derive(Debug, Clone)]
pub struct Classification {
    pub object: String,
    /// Whether `d(Q ⌟ ω) = 0`, for multivector inputs; `None` for forms.
    pub closed_contraction: Option<bool>,
    pub member: bool,
    pub witness: Option<Witness>,
}

/// Pointwise norm identity outcome.
#[derive(Debug, Clone)]
pub struct NormIdentityReport {
    pub lhs: Form,
    pub rhs: Form,
    pub equal: bool,
    pub intermediate_holds: bool,
}

/// Rank/dimension facts behind the space identifications.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IdentificationReport {
    pub rank_phi1: usize,
    pub rank_phi2: usize,
    pub ker_phi2_dim: usize,
    pub rank_starphi2: usize,
    pub ker_starphi2_dim: usize,
    pub dim_omega27: usize,
    pub dim_omega214: usize,
    pub image_phi1_in_omega27: bool,
    pub ker_phi2_flat_in_omega214: bool,
    pub injection_roundtrips: bool,
}

impl IdentificationReport {
    /// All values match the expected G₂ decomposition numbers.
    pub fn all_expected(&self) -> bool {
        self.rank_phi1 == 7
            && self.rank_phi2 == 7
            && self.ker_phi2_dim == 14
            && self.rank_starphi2 == 21
            && self.ker_starphi2_dim == 0
            && self.dim_omega27 == 7
            && self.dim_omega214 == 14
            && self.image_phi1_in_omega27
            && self.ker_phi2_flat_in_omega214
            && self.injection_roundtrips
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}
