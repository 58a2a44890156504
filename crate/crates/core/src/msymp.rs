//! Multisymplectic structures of degree k+1 on ℝⁿ.
//!
//! A structure caches the matrices of the contraction maps
//! `ω̂_j : Λ^j(ℝⁿ) → Λ^{k+1-j}((ℝⁿ)*), Q ↦ Q ⌟ ω` for j = 1..k, letting the
//! Hamiltonian equation `Q ⌟ ω = dα` be solved monomial by monomial as exact
//! rational linear algebra. The structure form must have constant
//! coefficients; the two structures of interest here (the G₂ 3-form and its
//! star) do.

use num_traits::Zero;
use serde::Serialize;

use crate::error::CalcError;
use crate::exterior::{contract, eq_or_both_zero, Form, MultiIndex, MultiVector};
use crate::linalg::QMatrix;
use crate::polyring::{Monomial, Polynomial};
use crate::schouten::{lie_derivative, schouten};
use crate::util::parity_rat;
use crate::Rational;

/// One cached contraction map `ω̂_j` with its rank and kernel.
#[derive(Debug, Clone)]
pub struct ContractionMap {
    pub j: usize,
    /// Rows: grade-(k+1-j) multi-indices; columns: grade-j multi-indices,
    /// both in lexicographic order.
    pub matrix: QMatrix,
    pub rank: usize,
    /// Constant-coefficient multivectors spanning the kernel of the map.
    pub kernel: Vec<MultiVector>,
}

/// Closed constant-coefficient nondegenerate (k+1)-form with its cached
/// contraction matrices. Immutable after [`MsympStructure::build`].
#[derive(Debug, Clone)]
pub struct MsympStructure {
    omega: Form,
    dim: usize,
    maps: Vec<ContractionMap>,
}

impl MsympStructure {
    /// Caches every `ω̂_j` and verifies nondegeneracy (`X ⌟ ω = 0` only for
    /// `X = 0`, i.e. the first map has full column rank).
    pub fn build(omega: Form) -> Result<Self, CalcError> {
        let dim = omega.dim();
        let degree = omega.grade();
        if degree < 2 || degree > dim {
            return Err(CalcError::GradeOutOfRange { grade: degree });
        }
        if !omega.has_constant_coefficients() {
            return Err(CalcError::NonConstantCoefficients);
        }
        assert!(omega.d().is_zero(), "constant forms are closed");
        let k = degree - 1;
        let mut maps = Vec::with_capacity(k);
        for j in 1..=k {
            let cols = MultiIndex::all(dim, j);
            let rows = MultiIndex::all(dim, degree - j);
            let mut matrix = QMatrix::zeros(rows.len(), cols.len());
            for (c, ci) in cols.iter().enumerate() {
                let image = contract(&MultiVector::basis(dim, ci.indices())?, &omega)?;
                for (r, ri) in rows.iter().enumerate() {
                    if let Some(p) = image.coeff(ri) {
                        *matrix.at_mut(r, c) = p.as_constant().expect("constant coefficients");
                    }
                }
            }
            let rank = matrix.rank();
            let kernel = matrix
                .kernel_basis()
                .into_iter()
                .map(|v| {
                    let mut q = MultiVector::zero(dim, j);
                    for (c, ci) in cols.iter().enumerate() {
                        if !v[c].is_zero() {
                            q.add_term(ci.clone(), Polynomial::constant(dim, v[c].clone()));
                        }
                    }
                    q
                })
                .collect();
            maps.push(ContractionMap {
                j,
                matrix,
                rank,
                kernel,
            });
        }
        if maps[0].rank != dim {
            return Err(CalcError::DegenerateForm);
        }
        Ok(MsympStructure { omega, dim, maps })
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The degree k+1 of the structure form.
    pub fn degree(&self) -> usize {
        self.omega.grade()
    }

    pub fn k(&self) -> usize {
        self.degree() - 1
    }

    pub fn map(&self, j: usize) -> Option<&ContractionMap> {
        self.maps.get(j.checked_sub(1)?)
    }

    pub fn maps(&self) -> &[ContractionMap] {
        &self.maps
    }

    /// Whether `d(Q ⌟ ω) = 0` for a (k-l)-multivector field, 0 ≤ l ≤ k-1.
    pub fn is_locally_hamiltonian(&self, q: &MultiVector) -> Result<bool, CalcError> {
        self.check_multivector_grade(q)?;
        Ok(contract(q, &self.omega)?.d().is_zero())
    }

    fn check_multivector_grade(&self, q: &MultiVector) -> Result<(), CalcError> {
        if q.dim() != self.dim {
            return Err(CalcError::DimensionMismatch {
                expected: self.dim,
                found: q.dim(),
            });
        }
        if q.grade() < 1 || q.grade() > self.k() {
            return Err(CalcError::GradeOutOfRange { grade: q.grade() });
        }
        Ok(())
    }

    /// Solves `Q ⌟ ω = dα` for a (k-l)-multivector field Q, monomial by
    /// monomial. The particular solution is the minimum-norm representative
    /// under the Euclidean norm on basis coefficients, making the output
    /// deterministic; the kernel basis spans the solution's ambiguity.
    pub fn solve_hamiltonian(&self, alpha: &Form) -> Result<SolveResult, CalcError> {
        if alpha.dim() != self.dim {
            return Err(CalcError::DimensionMismatch {
                expected: self.dim,
                found: alpha.dim(),
            });
        }
        let l = alpha.grade();
        let k = self.k();
        if l > k.saturating_sub(1) {
            return Err(CalcError::GradeOutOfRange { grade: l });
        }
        let q_grade = k - l;
        let map = &self.maps[q_grade - 1];
        let kernel = map.kernel.clone();
        let tau = alpha.d();
        let rows = MultiIndex::all(self.dim, l + 1);
        let cols = MultiIndex::all(self.dim, q_grade);
        let mut monomials: std::collections::BTreeSet<Monomial> = Default::default();
        for (_, p) in tau.terms() {
            for (m, _) in p.terms() {
                monomials.insert(m.clone());
            }
        }
        let mut particular = MultiVector::zero(self.dim, q_grade);
        for mono in monomials {
            let b: Vec<Rational> = rows
                .iter()
                .map(|r| {
                    tau.coeff(r)
                        .and_then(|p| p.coeff(&mono))
                        .cloned()
                        .unwrap_or_else(|| Rational::from_integer(0.into()))
                })
                .collect();
            let Some(x) = map.matrix.solve_min_norm(&b) else {
                return Ok(SolveResult {
                    status: SolveStatus::None,
                    particular: None,
                    kernel_basis: kernel,
                });
            };
            for (c, ci) in cols.iter().enumerate() {
                if !x[c].is_zero() {
                    particular.add_term(
                        ci.clone(),
                        Polynomial::from_terms(self.dim, [(mono.clone(), x[c].clone())]),
                    );
                }
            }
        }
        assert_eq!(
            contract(&particular, &self.omega)?,
            tau,
            "solver postcondition"
        );
        let status = if kernel.is_empty() {
            SolveStatus::Unique
        } else {
            SolveStatus::Underdetermined
        };
        Ok(SolveResult {
            status,
            particular: Some(particular),
            kernel_basis: kernel,
        })
    }

    fn validate_pair(&self, pair: &HamiltonianPair) -> Result<(), CalcError> {
        if pair.multivector.dim() != self.dim || pair.alpha.dim() != self.dim {
            return Err(CalcError::DimensionMismatch {
                expected: self.dim,
                found: pair.multivector.dim(),
            });
        }
        let q = pair.multivector.grade();
        if q < 1 || q > self.k() || q + pair.alpha.grade() != self.k() {
            return Err(CalcError::RejectedPair);
        }
        if contract(&pair.multivector, &self.omega)? != pair.alpha.d() {
            return Err(CalcError::RejectedPair);
        }
        Ok(())
    }

    /// The bracket `{α1, α2} = (-1)^{q1+q2+1} (Q1 ∧ Q2) ⌟ ω` on Hamiltonian
    /// forms, zero when `q1 + q2 > k+1`.
    pub fn ham_bracket(
        &self,
        p1: &HamiltonianPair,
        p2: &HamiltonianPair,
    ) -> Result<Form, CalcError> {
        self.validate_pair(p1)?;
        self.validate_pair(p2)?;
        let (q1, q2) = (p1.multivector.grade(), p2.multivector.grade());
        if q1 + q2 > self.degree() {
            return Ok(Form::zero(self.dim, 0));
        }
        let w = p1.multivector.wedge(&p2.multivector)?;
        Ok(contract(&w, &self.omega)?.scale(&parity_rat((q1 + q2 + 1) as i64)))
    }

    /// Bracket plus its degree bookkeeping: the Lie degree is `q1 + q2 - 1`,
    /// i.e. k minus the tensor degree of the result.
    pub fn ham_bracket_graded(
        &self,
        p1: &HamiltonianPair,
        p2: &HamiltonianPair,
    ) -> Result<HamBracket, CalcError> {
        let value = self.ham_bracket(p1, p2)?;
        let (q1, q2) = (p1.multivector.grade(), p2.multivector.grade());
        Ok(HamBracket {
            lie_degree: q1 + q2 - 1,
            tensor_degree: (self.degree()).saturating_sub(q1 + q2),
            value,
        })
    }

    /// Checks `d{α1, α2} = [Q1, Q2] ⌟ ω` exactly.
    pub fn bracket_exterior_derivative_check(
        &self,
        p1: &HamiltonianPair,
        p2: &HamiltonianPair,
    ) -> Result<bool, CalcError> {
        let lhs = self.ham_bracket(p1, p2)?.d();
        let rhs = contract(&schouten(&p1.multivector, &p2.multivector)?, &self.omega)?;
        Ok(eq_or_both_zero(&lhs, &rhs))
    }

    /// The cyclic Jacobi sum against its exact defect term
    /// `(-1)^{q3 q2 + q1 q2 + 1} d(Q1 ⌟ Q2 ⌟ dα3)`; the inner brackets are
    /// paired with solver-produced Hamiltonian multivector fields.
    pub fn jacobi_defect(
        &self,
        p1: &HamiltonianPair,
        p2: &HamiltonianPair,
        p3: &HamiltonianPair,
    ) -> Result<JacobiDefect, CalcError> {
        self.validate_pair(p1)?;
        self.validate_pair(p2)?;
        self.validate_pair(p3)?;
        let (q1, q2, q3) = (
            p1.multivector.grade() as i64,
            p2.multivector.grade() as i64,
            p3.multivector.grade() as i64,
        );
        let t1 = self
            .cyclic_term(p1, p2, p3)?
            .scale(&parity_rat(q1 * (q3 - 1)));
        let t2 = self
            .cyclic_term(p2, p3, p1)?
            .scale(&parity_rat(q2 * (q1 - 1)));
        let t3 = self
            .cyclic_term(p3, p1, p2)?
            .scale(&parity_rat(q3 * (q2 - 1)));
        let lhs = &(&t1 + &t2) + &t3;
        let defect_potential = contract(
            &p1.multivector,
            &contract(&p2.multivector, &p3.alpha.d())?,
        )?
        .scale(&parity_rat(q3 * q2 + q1 * q2 + 1));
        let rhs = defect_potential.d();
        let equal = eq_or_both_zero(&lhs, &rhs);
        Ok(JacobiDefect { lhs, rhs, equal })
    }

    /// `{α_a, {α_b, α_c}}` with the inner bracket's multivector recovered by
    /// the solver.
    fn cyclic_term(
        &self,
        pa: &HamiltonianPair,
        pb: &HamiltonianPair,
        pc: &HamiltonianPair,
    ) -> Result<Form, CalcError> {
        let inner = self.ham_bracket(pb, pc)?;
        if inner.grade() > self.k().saturating_sub(1) && !inner.is_zero() {
            return Err(CalcError::InnerBracketUnsolvable);
        }
        let inner_q = if inner.is_zero() {
            MultiVector::zero(self.dim, (pb.multivector.grade() + pc.multivector.grade()).saturating_sub(1))
        } else {
            let solved = self.solve_hamiltonian(&inner)?;
            match solved.particular {
                Some(q) => q,
                None => return Err(CalcError::InnerBracketUnsolvable),
            }
        };
        let inner_pair = HamiltonianPair {
            multivector: inner_q,
            alpha: inner,
        };
        // bracket of the outer pair against the solved inner pair; the
        // validation inside ham_bracket would reject a zero inner pair whose
        // grade bookkeeping is out of range, so compute directly
        let (qa, qi) = (pa.multivector.grade(), inner_pair.multivector.grade());
        if qa + qi > self.degree() {
            return Ok(Form::zero(self.dim, 0));
        }
        let w = pa.multivector.wedge(&inner_pair.multivector)?;
        Ok(contract(&w, &self.omega)?.scale(&parity_rat((qa + qi + 1) as i64)))
    }

    /// The biconditional `{α1, α2} = 0 ⟺ L_{Q2} α1 = 0`, defined when
    /// `q1 + q2 = k + 1` exactly.
    pub fn check_bracket_zero_prop(
        &self,
        p1: &HamiltonianPair,
        p2: &HamiltonianPair,
    ) -> Result<BracketZeroCheck, CalcError> {
        self.validate_pair(p1)?;
        self.validate_pair(p2)?;
        let (q1, q2) = (p1.multivector.grade(), p2.multivector.grade());
        if q1 + q2 != self.degree() {
            return Err(CalcError::GradeOutOfRange { grade: q1 + q2 });
        }
        let bracket_zero = self.ham_bracket(p1, p2)?.is_zero();
        let lie_zero = lie_derivative(&p2.multivector, &p1.alpha)?.is_zero();
        Ok(BracketZeroCheck {
            bracket_zero,
            lie_zero,
            agree: bracket_zero == lie_zero,
        })
    }

    /// Quotient-level relation for `q1 + q2 < k + 1`: the difference
    /// `{α1, α2} - (-1)^{q1+q2+1} L_{Q2} α1` is exact (constant, for grade
    /// zero). Only the quotient statement is asserted; no sign convention
    /// beyond the bracket's own is involved.
    pub fn bracket_lie_quotient_check(
        &self,
        p1: &HamiltonianPair,
        p2: &HamiltonianPair,
    ) -> Result<bool, CalcError> {
        self.validate_pair(p1)?;
        self.validate_pair(p2)?;
        let (q1, q2) = (p1.multivector.grade(), p2.multivector.grade());
        if q1 + q2 >= self.degree() {
            return Err(CalcError::GradeOutOfRange { grade: q1 + q2 });
        }
        let bracket = self.ham_bracket(p1, p2)?;
        let lie = lie_derivative(&p2.multivector, &p1.alpha)?
            .scale(&parity_rat((q1 + q2 + 1) as i64));
        let diff = &bracket - &lie;
        Ok(quotient_zero(&diff))
    }
}

/// Zero in the quotient by closed forms: exact for grade ≥ 1 (closed is
/// enough on ℝⁿ with polynomial coefficients), constant for grade 0.
pub fn quotient_zero(form: &Form) -> bool {
    if form.grade() == 0 {
        return form
            .as_scalar()
            .map(|p| p.is_constant())
            .unwrap_or(true);
    }
    form.d().is_zero()
}

/// Two Hamiltonian forms are quotient-equal when their difference is closed.
pub fn quotient_equal(a: &Form, b: &Form) -> bool {
    if a.is_zero() || b.is_zero() || a.grade() == b.grade() {
        let diff = a - b;
        quotient_zero(&diff)
    } else {
        false
    }
}

/// A `(Q, α)` pair with `Q ⌟ ω = dα`, validated against a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianPair {
    multivector: MultiVector,
    alpha: Form,
}

impl HamiltonianPair {
    pub fn new(
        structure: &MsympStructure,
        multivector: MultiVector,
        alpha: Form,
    ) -> Result<Self, CalcError> {
        let pair = HamiltonianPair { multivector, alpha };
        structure.validate_pair(&pair)?;
        Ok(pair)
    }

    pub fn multivector(&self) -> &MultiVector {
        &self.multivector
    }

    pub fn form(&self) -> &Form {
        &self.alpha
    }

    /// Grade of the multivector side, the pair's Lie degree.
    pub fn lie_degree(&self) -> usize {
        self.multivector.grade()
    }

    /// Same pair with the multivector shifted by a kernel element; the shift
    /// must contract the structure form to zero for the pair to stay valid.
    pub fn shifted(
        &self,
        structure: &MsympStructure,
        shift: &MultiVector,
    ) -> Result<Self, CalcError> {
        Self::new(
            structure,
            &self.multivector + shift,
            self.alpha.clone(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    None,
    Unique,
    Underdetermined,
}

/// Outcome of the contraction-equation solver.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub particular: Option<MultiVector>,
    pub kernel_basis: Vec<MultiVector>,
}

impl SolveResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "status": match self.status {
                SolveStatus::None => "none",
                SolveStatus::Unique => "unique",
                SolveStatus::Underdetermined => "underdetermined",
            },
            "particular": self.particular.as_ref().map(|q| q.to_string()),
            "kernel_basis": self.kernel_basis.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Bracket value with Lie/tensor degree bookkeeping.
#[derive(Debug, Clone)]
pub struct HamBracket {
    pub value: Form,
    pub lie_degree: usize,
    pub tensor_degree: usize,
}

/// Both sides of the Jacobi-defect relation.
#[derive(Debug, Clone)]
pub struct JacobiDefect {
    pub lhs: Form,
    pub rhs: Form,
    pub equal: bool,
}

/// Outcome of the grade-complementary bracket/Lie-derivative biconditional.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BracketZeroCheck {
    pub bracket_zero: bool,
    pub lie_zero: bool,
    pub agree: bool,
}
