//! Elaboration of parsed expressions into typed values with grade checking.

use std::cell::OnceCell;

use num_traits::{Signed, ToPrimitive, Zero};

use g2calc::exterior::{Form, MultiVector};
use g2calc::g2::{self, G2Context};
use g2calc::polyring::Polynomial;
use g2calc::schouten;
use g2calc::{contract, Metric};

use crate::expr::{Expr, Op, Span};
use crate::CliError;

/// A fully evaluated expression: scalars absorb every grade-0 result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scalar(Polynomial),
    Form(Form),
    MultiVector(MultiVector),
}

impl Value {
    fn canonical(self) -> Value {
        match self {
            Value::Form(f) if f.grade() == 0 => Value::Scalar(f.as_scalar().expect("grade 0")),
            Value::MultiVector(q) if q.grade() == 0 => {
                Value::Scalar(q.as_scalar().expect("grade 0"))
            }
            other => other,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Form(_) => "form",
            Value::MultiVector(_) => "multivector",
        }
    }

    pub fn grade(&self) -> usize {
        match self {
            Value::Scalar(_) => 0,
            Value::Form(f) => f.grade(),
            Value::MultiVector(q) => q.grade(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Value::Scalar(p) => p.to_string(),
            Value::Form(f) => f.to_string(),
            Value::MultiVector(q) => q.to_string(),
        }
    }
}

/// Evaluates expressions against a fixed ambient dimension; the G₂ context
/// is created on first use and only exists in dimension 7.
pub struct Elaborator {
    dim: usize,
    ctx: OnceCell<G2Context>,
}

impl Elaborator {
    pub fn new(dim: usize) -> Result<Self, CliError> {
        if !(1..=9).contains(&dim) {
            return Err(CliError::Usage(format!(
                "dimension {dim} out of supported range 1..=9"
            )));
        }
        Ok(Elaborator {
            dim,
            ctx: OnceCell::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn g2(&self, span: Span) -> Result<&G2Context, CliError> {
        if self.dim != 7 {
            return Err(CliError::Elab {
                message: format!("this operation needs dimension 7, current dimension is {}", self.dim),
                pos: span.start,
            });
        }
        Ok(self.ctx.get_or_init(G2Context::standard))
    }

    pub fn eval_str(&self, src: &str) -> Result<Value, CliError> {
        let ast = crate::expr::parse(src)?;
        self.eval(&ast)
    }

    pub fn eval(&self, expr: &Expr) -> Result<Value, CliError> {
        let v = match expr {
            Expr::Number(n, _) => Value::Scalar(Polynomial::constant(self.dim, n.clone())),
            Expr::Ident(name, span) => self.ident(name, *span)?,
            Expr::Neg(inner, _) => match self.eval(inner)? {
                Value::Scalar(p) => Value::Scalar(-&p),
                Value::Form(f) => Value::Form(-&f),
                Value::MultiVector(q) => Value::MultiVector(-&q),
            },
            Expr::Binary(op, lhs, rhs, span) => {
                let a = self.eval(lhs)?;
                let b = self.eval(rhs)?;
                self.binary(*op, a, b, *span)?
            }
            Expr::Call(name, args, span) => self.call(name, args, *span)?,
        };
        Ok(v.canonical())
    }

    fn ident(&self, name: &str, span: Span) -> Result<Value, CliError> {
        let err = |message: String| CliError::Elab {
            message,
            pos: span.start,
        };
        if let Some(digits) = name.strip_prefix("dx") {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                return Ok(Value::Form(self.basis_form(digits, span)?));
            }
        }
        if let Some(digits) = name.strip_prefix('e') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                return Ok(Value::MultiVector(self.basis_multivector(digits, span)?));
            }
        }
        if let Some(digits) = name.strip_prefix('x') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let axis: usize = digits.parse().map_err(|_| err("bad axis".to_string()))?;
                if axis < 1 || axis > self.dim {
                    return Err(err(format!("axis {axis} out of range 1..={}", self.dim)));
                }
                return Ok(Value::Scalar(Polynomial::var(self.dim, axis)));
            }
        }
        match name {
            "phi0" => {
                self.g2(span)?;
                Ok(Value::Form(g2::phi0()))
            }
            "starphi0" => {
                self.g2(span)?;
                Ok(Value::Form(g2::star_phi0()))
            }
            "vol7" => {
                self.g2(span)?;
                Ok(Value::Form(
                    Form::basis(7, &[1, 2, 3, 4, 5, 6, 7]).expect("top form"),
                ))
            }
            _ => Err(err(format!("unknown identifier '{name}'"))),
        }
    }

    fn axes_from_digits(&self, digits: &str, span: Span) -> Result<Vec<u8>, CliError> {
        let mut axes = Vec::new();
        for ch in digits.chars() {
            let d = ch.to_digit(10).expect("digit") as u8;
            if d == 0 || d as usize > self.dim {
                return Err(CliError::Elab {
                    message: format!("axis {d} out of range 1..={}", self.dim),
                    pos: span.start,
                });
            }
            axes.push(d);
        }
        Ok(axes)
    }

    fn basis_form(&self, digits: &str, span: Span) -> Result<Form, CliError> {
        let axes = self.axes_from_digits(digits, span)?;
        let mut out = Form::scalar(self.dim, Polynomial::one(self.dim));
        for a in axes {
            out = out.wedge(&Form::basis(self.dim, &[a]).expect("in range"))?;
        }
        Ok(out)
    }

    fn basis_multivector(&self, digits: &str, span: Span) -> Result<MultiVector, CliError> {
        let axes = self.axes_from_digits(digits, span)?;
        let mut out = MultiVector::scalar(self.dim, Polynomial::one(self.dim));
        for a in axes {
            out = out.wedge(&MultiVector::basis(self.dim, &[a]).expect("in range"))?;
        }
        Ok(out)
    }

    fn binary(&self, op: Op, a: Value, b: Value, span: Span) -> Result<Value, CliError> {
        let err = |message: String| CliError::Elab {
            message,
            pos: span.start,
        };
        match op {
            Op::Add | Op::Sub => {
                let negate = op == Op::Sub;
                match (a, b) {
                    (Value::Scalar(p), Value::Scalar(q)) => {
                        let q = if negate { -&q } else { q };
                        Ok(Value::Scalar(p.try_add(&q)?))
                    }
                    (Value::Form(f), Value::Form(g)) => {
                        if f.grade() != g.grade() && !f.is_zero() && !g.is_zero() {
                            return Err(err(format!(
                                "cannot add a grade-{} form to a grade-{} form",
                                f.grade(),
                                g.grade()
                            )));
                        }
                        let g = if negate { -&g } else { g };
                        Ok(Value::Form(&f + &g))
                    }
                    (Value::MultiVector(p), Value::MultiVector(q)) => {
                        if p.grade() != q.grade() && !p.is_zero() && !q.is_zero() {
                            return Err(err(format!(
                                "cannot add a grade-{} multivector to a grade-{} multivector",
                                p.grade(),
                                q.grade()
                            )));
                        }
                        let q = if negate { -&q } else { q };
                        Ok(Value::MultiVector(&p + &q))
                    }
                    (a, b) => Err(err(format!("cannot add {} and {}", a.kind(), b.kind()))),
                }
            }
            Op::Mul => match (a, b) {
                (Value::Scalar(p), Value::Scalar(q)) => Ok(Value::Scalar(p.try_mul(&q)?)),
                (Value::Scalar(p), Value::Form(f)) | (Value::Form(f), Value::Scalar(p)) => {
                    Ok(Value::Form(f.scale_poly(&p)))
                }
                (Value::Scalar(p), Value::MultiVector(q))
                | (Value::MultiVector(q), Value::Scalar(p)) => {
                    Ok(Value::MultiVector(q.scale_poly(&p)))
                }
                (a, b) => Err(err(format!(
                    "cannot multiply {} by {}; use '^' for the wedge product",
                    a.kind(),
                    b.kind()
                ))),
            },
            Op::Div => {
                let divisor = match b {
                    Value::Scalar(q) => q.as_constant().filter(|c| !c.is_zero()),
                    _ => None,
                };
                let Some(c) = divisor else {
                    return Err(err(
                        "division requires a nonzero constant divisor".to_string()
                    ));
                };
                let inv = c.recip();
                Ok(match a {
                    Value::Scalar(p) => Value::Scalar(p.scale(&inv)),
                    Value::Form(f) => Value::Form(f.scale(&inv)),
                    Value::MultiVector(q) => Value::MultiVector(q.scale(&inv)),
                })
            }
            Op::Wedge => match (a, b) {
                (Value::Scalar(p), Value::Scalar(q)) => {
                    // scalar ^ scalar is exponentiation by a small integer
                    let e = q
                        .as_constant()
                        .filter(|c| c.is_integer() && !c.is_negative())
                        .and_then(|c| c.to_integer().to_u32());
                    match e {
                        Some(e) if e <= 64 => Ok(Value::Scalar(p.pow(e))),
                        _ => Err(err(
                            "exponent must be a small nonnegative integer".to_string()
                        )),
                    }
                }
                (Value::Form(f), Value::Form(g)) => Ok(Value::Form(f.wedge(&g)?)),
                (Value::MultiVector(p), Value::MultiVector(q)) => {
                    Ok(Value::MultiVector(p.wedge(&q)?))
                }
                (Value::Scalar(p), Value::Form(f)) | (Value::Form(f), Value::Scalar(p)) => {
                    Ok(Value::Form(f.scale_poly(&p)))
                }
                (Value::Scalar(p), Value::MultiVector(q))
                | (Value::MultiVector(q), Value::Scalar(p)) => {
                    Ok(Value::MultiVector(q.scale_poly(&p)))
                }
                (a, b) => Err(err(format!(
                    "cannot wedge a {} with a {}",
                    a.kind(),
                    b.kind()
                ))),
            },
        }
    }

    fn as_form(&self, v: Value, span: Span) -> Result<Form, CliError> {
        match v {
            Value::Form(f) => Ok(f),
            Value::Scalar(p) => Ok(Form::scalar(self.dim, p)),
            Value::MultiVector(_) => Err(CliError::Elab {
                message: "expected a form, found a multivector".to_string(),
                pos: span.start,
            }),
        }
    }

    fn as_multivector(&self, v: Value, span: Span) -> Result<MultiVector, CliError> {
        match v {
            Value::MultiVector(q) => Ok(q),
            Value::Scalar(p) => Ok(MultiVector::scalar(self.dim, p)),
            Value::Form(_) => Err(CliError::Elab {
                message: "expected a multivector, found a form".to_string(),
                pos: span.start,
            }),
        }
    }

    fn call(&self, name: &str, args: &[Expr], span: Span) -> Result<Value, CliError> {
        let arity = |want: usize| -> Result<(), CliError> {
            if args.len() != want {
                Err(CliError::Elab {
                    message: format!("{name} takes {want} argument(s), found {}", args.len()),
                    pos: span.start,
                })
            } else {
                Ok(())
            }
        };
        match name {
            "d" => {
                arity(1)?;
                let f = self.as_form(self.eval(&args[0])?, args[0].span())?;
                Ok(Value::Form(f.d()))
            }
            "star" => {
                arity(1)?;
                let f = self.as_form(self.eval(&args[0])?, args[0].span())?;
                Ok(Value::Form(Metric::euclidean(self.dim).star(&f)?))
            }
            "flat" => {
                arity(1)?;
                let q = self.as_multivector(self.eval(&args[0])?, args[0].span())?;
                Ok(Value::Form(Metric::euclidean(self.dim).flat(&q)?))
            }
            "sharp" => {
                arity(1)?;
                let f = self.as_form(self.eval(&args[0])?, args[0].span())?;
                Ok(Value::MultiVector(Metric::euclidean(self.dim).sharp(&f)?))
            }
            "contract" => {
                arity(2)?;
                let q = self.as_multivector(self.eval(&args[0])?, args[0].span())?;
                let f = self.as_form(self.eval(&args[1])?, args[1].span())?;
                Ok(Value::Form(contract(&q, &f)?))
            }
            "sn" => {
                arity(2)?;
                let a = self.as_multivector(self.eval(&args[0])?, args[0].span())?;
                let b = self.as_multivector(self.eval(&args[1])?, args[1].span())?;
                Ok(Value::MultiVector(schouten::schouten(&a, &b)?))
            }
            "lie" => {
                arity(2)?;
                let q = self.as_multivector(self.eval(&args[0])?, args[0].span())?;
                let f = self.as_form(self.eval(&args[1])?, args[1].span())?;
                Ok(Value::Form(schouten::lie_derivative(&q, &f)?))
            }
            "pi7" => {
                arity(1)?;
                let ctx = self.g2(span)?;
                let f = self.as_form(self.eval(&args[0])?, args[0].span())?;
                Ok(Value::Form(ctx.pi7(&f)?))
            }
            "pi14" => {
                arity(1)?;
                let ctx = self.g2(span)?;
                let f = self.as_form(self.eval(&args[0])?, args[0].span())?;
                Ok(Value::Form(ctx.pi14(&f)?))
            }
            "cross" => {
                arity(2)?;
                let ctx = self.g2(span)?;
                let a = self.as_multivector(self.eval(&args[0])?, args[0].span())?;
                let b = self.as_multivector(self.eval(&args[1])?, args[1].span())?;
                Ok(Value::MultiVector(ctx.cross(&a, &b)?))
            }
            _ => Err(CliError::Elab {
                message: format!("unknown function '{name}'"),
                pos: span.start,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str) -> Result<Value, CliError> {
        Elaborator::new(7).unwrap().eval_str(src)
    }

    #[test]
    fn grade_two_form_parses() {
        let v = ev("dx1^dx2 + x3*dx4^dx5").unwrap();
        assert_eq!(v.kind(), "form");
        assert_eq!(v.grade(), 2);
        assert_eq!(v.render(), "dx12 + x3*dx45");
    }

    #[test]
    fn grade_two_multivector_parses() {
        let v = ev("e6^e7").unwrap();
        assert_eq!(v.kind(), "multivector");
        assert_eq!(v.grade(), 2);
        assert_eq!(v.render(), "e6^e7");
    }

    #[test]
    fn mixing_forms_and_vectors_in_a_wedge_is_rejected() {
        let err = ev("dx1 ^ e2").unwrap_err();
        match err {
            CliError::Elab { message, .. } => {
                assert!(message.contains("wedge"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grade_mismatched_sums_are_rejected() {
        assert!(ev("dx1 + dx12").is_err());
        assert!(ev("dx1 + e1").is_err());
    }

    #[test]
    fn worked_contraction_evaluates() {
        let v = ev("contract(e6^e7, starphi0)").unwrap();
        assert_eq!(v.render(), "dx23 + dx45");
    }

    #[test]
    fn rational_literals_and_powers() {
        let v = ev("3/2 * x1^2").unwrap();
        assert_eq!(v.render(), "3/2*x1^2");
        assert!(ev("x1 / x2").is_err());
        assert!(ev("x1 / 0").is_err());
    }

    #[test]
    fn normalizing_basis_digit_order() {
        // dx21 = -dx12
        let a = ev("dx21").unwrap();
        let b = ev("-dx12").unwrap();
        assert_eq!(a, b);
        // a repeated axis collapses to zero
        let z = ev("dx11").unwrap();
        match z {
            Value::Form(f) => assert!(f.is_zero()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn star_follows_the_ambient_dimension() {
        let el = Elaborator::new(3).unwrap();
        assert_eq!(el.eval_str("star(dx1)").unwrap().render(), "dx23");
        assert_eq!(el.eval_str("star(dx2)").unwrap().render(), "-dx13");
        assert_eq!(el.eval_str("star(1)").unwrap().render(), "dx123");
    }

    #[test]
    fn dimension_gates_g2_builtins() {
        let el = Elaborator::new(3).unwrap();
        assert!(el.eval_str("phi0").is_err());
        assert!(el.eval_str("dx12").is_ok());
        assert!(el.eval_str("dx4").is_err());
    }

    #[test]
    fn cross_product_through_the_cli_surface() {
        let v = ev("cross(e1, e2)").unwrap();
        assert_eq!(v.render(), "e3");
    }
}
