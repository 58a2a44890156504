//! The Schouten–Nijenhuis bracket on multivector fields and the extended Lie
//! derivative of forms along multivector fields.
//!
//! The bracket is built constructively: on a decomposable first argument
//! `[X1 ^ ... ^ Xl, Q] = Σ_i (-1)^{i+1} X1 ^ ... ^ X̂i ^ ... ^ Xl ^ L_{Xi} Q`,
//! with the coefficient of each sparse term attached to its first factor,
//! and `[f, Q] = [Q, f]` fixed by graded antisymmetry (the sign exponent
//! q1*q2 vanishes). The six bracket/Lie-derivative identities in the test
//! suites are the oracle for this construction, not its source.

use crate::error::CalcError;
use crate::exterior::{
    contract, coordinate_vector, unit_multivector, Form, MultiIndex, MultiVector,
};
use crate::polyring::Polynomial;
use crate::util::parity_rat;

/// Directional derivative `X(f)` of a function along a vector field.
fn apply_vector(x: &MultiVector, f: &Polynomial) -> Polynomial {
    debug_assert_eq!(x.grade(), 1);
    let mut out = Polynomial::zero(f.nvars());
    for (idx, comp) in x.terms() {
        let axis = idx.indices()[0] as usize;
        out = out
            .try_add(&comp.try_mul(&f.partial(axis).expect("axis in range")).unwrap())
            .unwrap();
    }
    out
}

/// `[X, ∂_axis] = -Σ_m (∂X^m/∂x^axis) ∂_m`.
fn bracket_with_coordinate(x: &MultiVector, axis: u8) -> MultiVector {
    let dim = x.dim();
    let mut out = MultiVector::zero(dim, 1);
    for (idx, comp) in x.terms() {
        let d = comp.partial(axis as usize).expect("axis in range");
        if !d.is_zero() {
            out.add_term(idx.clone(), -&d);
        }
    }
    out
}

/// Lie derivative of a multivector field along a vector field, extended as a
/// derivation over the wedge from `L_X f = X(f)` and `L_X Y = [X, Y]`.
fn lie_multivector(x: &MultiVector, q: &MultiVector) -> Result<MultiVector, CalcError> {
    debug_assert_eq!(x.grade(), 1);
    let dim = q.dim();
    let mut out = MultiVector::zero(dim, q.grade());
    for (idx, h) in q.terms() {
        out.add_term(idx.clone(), apply_vector(x, h));
        for (slot, &axis) in idx.indices().iter().enumerate() {
            let replaced = bracket_with_coordinate(x, axis);
            if replaced.is_zero() {
                continue;
            }
            let mut acc = unit_multivector(dim);
            for (c, &jc) in idx.indices().iter().enumerate() {
                let factor = if c == slot {
                    replaced.clone()
                } else {
                    coordinate_vector(dim, jc)
                };
                acc = acc.wedge(&factor)?;
            }
            out = &out + &acc.scale_poly(h);
        }
    }
    Ok(out)
}

/// Standard Lie bracket of vector fields, `[X,Y]^i = X(Y^i) - Y(X^i)`.
pub fn lie_bracket(x: &MultiVector, y: &MultiVector) -> Result<MultiVector, CalcError> {
    if x.dim() != y.dim() {
        return Err(CalcError::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    if x.grade() != 1 || y.grade() != 1 {
        return Err(CalcError::GradeOutOfRange {
            grade: x.grade().max(y.grade()),
        });
    }
    let dim = x.dim();
    let mut out = MultiVector::zero(dim, 1);
    for i in 1..=dim as u8 {
        let idx = MultiIndex::single(i);
        let zero = Polynomial::zero(dim);
        let yi = y.coeff(&idx).unwrap_or(&zero);
        let xi = x.coeff(&idx).unwrap_or(&zero);
        let c = apply_vector(x, yi).try_sub(&apply_vector(y, xi))?;
        out.add_term(idx, c);
    }
    Ok(out)
}

/// `[f·∂_I, Q]` for a single sparse term with `|I| >= 1`.
fn decomposable_bracket(
    f: &Polynomial,
    i: &MultiIndex,
    q: &MultiVector,
) -> Result<MultiVector, CalcError> {
    let dim = q.dim();
    let l = i.grade();
    debug_assert!(l >= 1);
    let factor = |c: usize| -> MultiVector {
        let axis = i.indices()[c];
        if c == 0 {
            MultiVector::from_terms(dim, 1, [(MultiIndex::single(axis), f.clone())])
        } else {
            coordinate_vector(dim, axis)
        }
    };
    let result_grade = (l + q.grade()).saturating_sub(1);
    let mut out = MultiVector::zero(dim, result_grade);
    for a in 0..l {
        let la = lie_multivector(&factor(a), q)?;
        if la.is_zero() {
            continue;
        }
        let mut w = unit_multivector(dim);
        for c in 0..l {
            if c != a {
                w = w.wedge(&factor(c))?;
            }
        }
        out = &out + &w.wedge(&la)?.scale(&parity_rat(a as i64));
    }
    Ok(out)
}

/// Schouten–Nijenhuis bracket, grade `q1 + q2 - 1`.
pub fn schouten(q1: &MultiVector, q2: &MultiVector) -> Result<MultiVector, CalcError> {
    if q1.dim() != q2.dim() {
        return Err(CalcError::DimensionMismatch {
            expected: q1.dim(),
            found: q2.dim(),
        });
    }
    let (g1, g2) = (q1.grade(), q2.grade());
    if g1 == 0 && g2 == 0 {
        // a bracket of two functions lands in grade -1, which is zero
        return Ok(MultiVector::zero(q1.dim(), 0));
    }
    if g1 == 0 {
        // [f, Q] = (-1)^{0·q} [Q, f]
        return schouten(q2, q1);
    }
    let mut out = MultiVector::zero(q1.dim(), g1 + g2 - 1);
    for (idx, f) in q1.terms() {
        out = &out + &decomposable_bracket(f, idx, q2)?;
    }
    Ok(out)
}

/// A Schouten bracket together with the operand grades it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBracketResult {
    pub value: MultiVector,
    pub operand_grades: (usize, usize),
}

pub fn schouten_graded(
    q1: &MultiVector,
    q2: &MultiVector,
) -> Result<GradedBracketResult, CalcError> {
    Ok(GradedBracketResult {
        value: schouten(q1, q2)?,
        operand_grades: (q1.grade(), q2.grade()),
    })
}

/// Extended Lie derivative of a form along a multivector field,
/// `L_Q α = Q ⌟ dα - (-1)^q d(Q ⌟ α)`.
pub fn lie_derivative(q: &MultiVector, alpha: &Form) -> Result<Form, CalcError> {
    let t1 = contract(q, &alpha.d())?;
    let t2 = contract(q, alpha)?
        .d()
        .scale(&parity_rat(q.grade() as i64));
    Ok(&t1 - &t2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{vector_field, Form};
    use crate::g2;

    fn e(axis: u8) -> MultiVector {
        coordinate_vector(7, axis)
    }

    fn x(i: usize) -> Polynomial {
        Polynomial::var(7, i)
    }

    #[test]
    fn coordinate_fields_commute() {
        assert!(lie_bracket(&e(1), &e(2)).unwrap().is_zero());
        assert!(schouten(&e(1), &e(2)).unwrap().is_zero());
    }

    #[test]
    fn lie_bracket_coordinate_formula() {
        // [x1 ∂2, ∂1] = -∂2
        let a = e(2).scale_poly(&x(1));
        let got = lie_bracket(&a, &e(1)).unwrap();
        assert_eq!(got, -&e(2));
        assert_eq!(schouten(&a, &e(1)).unwrap(), -&e(2));
    }

    #[test]
    fn lie_bracket_leibniz_in_function_multiples() {
        // [X, fY] = f[X,Y] + X(f)Y
        let xf = vector_field(vec![
            x(2),
            Polynomial::one(7),
            Polynomial::zero(7),
            x(1),
            Polynomial::zero(7),
            Polynomial::zero(7),
            Polynomial::zero(7),
        ]);
        let yf = vector_field(vec![
            Polynomial::zero(7),
            x(3),
            x(1),
            Polynomial::zero(7),
            Polynomial::zero(7),
            Polynomial::one(7),
            Polynomial::zero(7),
        ]);
        let f = &x(1) + &x(2);
        let lhs = lie_bracket(&xf, &yf.scale_poly(&f)).unwrap();
        let rhs = &lie_bracket(&xf, &yf).unwrap().scale_poly(&f)
            + &yf.scale_poly(&apply_vector(&xf, &f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_decomposables_bracket_to_zero() {
        let q = e(2).wedge(&e(3)).unwrap();
        assert!(schouten(&e(1), &q).unwrap().is_zero());
        assert!(schouten(&q, &e(1)).unwrap().is_zero());
    }

    #[test]
    fn vector_fields_self_bracket_to_zero() {
        let xf = vector_field(vec![
            x(2),
            (&x(1) * &x(3)),
            Polynomial::one(7),
            Polynomial::zero(7),
            x(5),
            Polynomial::zero(7),
            Polynomial::zero(7),
        ]);
        assert!(schouten(&xf, &xf).unwrap().is_zero());
    }

    #[test]
    fn graded_antisymmetry_on_a_mixed_pair() {
        // [x1 e2^e3, e1] against [e1, x1 e2^e3] with sign (-1)^{2·1}
        let q = e(2).wedge(&e(3)).unwrap().scale_poly(&x(1));
        let ab = schouten(&q, &e(1)).unwrap();
        let ba = schouten(&e(1), &q).unwrap();
        assert_eq!(ab, ba.scale(&parity_rat(2)));
        assert!(!ab.is_zero());
    }

    #[test]
    fn bracket_with_function_is_directional_derivative() {
        // [X, f] = X(f)
        let f = MultiVector::scalar(7, &x(1) * &x(2));
        let got = schouten(&e(1), &f).unwrap();
        assert_eq!(got.as_scalar().unwrap(), x(2));
        // and [f, X] agrees (sign exponent is zero)
        let got = schouten(&f, &e(1)).unwrap();
        assert_eq!(got.as_scalar().unwrap(), x(2));
    }

    #[test]
    fn lie_derivative_worked_example() {
        // L_{∂1}(x1 dx2) = dx2
        let alpha = Form::from_terms(7, 1, [(MultiIndex::single(2), x(1))]);
        assert_eq!(
            lie_derivative(&e(1), &alpha).unwrap(),
            Form::basis(7, &[2]).unwrap()
        );
    }

    #[test]
    fn lie_derivative_vanishes_when_both_terms_do() {
        // dα = 0 and Q ⌟ α = 0
        let alpha = Form::basis(7, &[4, 5]).unwrap();
        let q = e(1).wedge(&e(2)).unwrap();
        assert!(contract(&q, &alpha).unwrap().is_zero());
        assert!(lie_derivative(&q, &alpha).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_of_phi0_along_e67() {
        // L_{e6^e7} φ₀ = -d((e6^e7) ⌟ φ₀) = -d(dx1) = 0
        let q = e(6).wedge(&e(7)).unwrap();
        assert!(lie_derivative(&q, &g2::phi0()).unwrap().is_zero());
    }

    #[test]
    fn lie_bracket_agrees_with_schouten_on_vector_fields() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(61);
        for _ in 0..50 {
            let mut comp = |_: usize| {
                let mut p = Polynomial::zero(7);
                for _ in 0..rng.gen_range(0..3) {
                    let mut exps = vec![0u32; 7];
                    exps[rng.gen_range(0..7)] += rng.gen_range(0..=2);
                    p.add_term(
                        crate::polyring::Monomial::from_exponents(exps),
                        crate::rat(rng.gen_range(-3..=3), 1),
                    );
                }
                p
            };
            let xf = vector_field((0..7).map(&mut comp).collect());
            let yf = vector_field((0..7).map(&mut comp).collect());
            assert_eq!(
                lie_bracket(&xf, &yf).unwrap(),
                schouten(&xf, &yf).unwrap()
            );
        }
    }

    #[test]
    fn graded_result_carries_operand_grades() {
        let q = e(2).wedge(&e(3)).unwrap().scale_poly(&x(1));
        let r = schouten_graded(&q, &e(1)).unwrap();
        assert_eq!(r.operand_grades, (2, 1));
        assert_eq!(r.value.grade(), 2);
        assert_eq!(r.value, schouten(&q, &e(1)).unwrap());
    }

    #[test]
    fn scalar_bracket_grade_edge_cases() {
        let f = MultiVector::scalar(7, x(1));
        let g = MultiVector::scalar(7, x(2));
        assert!(schouten(&f, &g).unwrap().is_zero());
        // [x3 e1^e2, x1]: only the first factor differentiates x1, leaving
        // (+1)·e2·(x3·1) by the decomposable expansion.
        let q = e(1).wedge(&e(2)).unwrap().scale_poly(&x(3));
        let got = schouten(&q, &MultiVector::scalar(7, x(1))).unwrap();
        assert_eq!(got.grade(), 1);
        assert_eq!(got, e(2).scale_poly(&x(3)));
    }
}
