//! Sparse multivariate polynomials over the rationals.
//!
//! These are the coefficient functions of every form and multivector field in
//! the crate. Terms are kept in a map with no zero entries, so structural
//! equality (`==`) coincides with mathematical equality. Values are immutable
//! after construction and safe to share across threads.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::CalcError;
use crate::Rational;

/// Exponent vector of one monomial. Ordered by total degree, then
/// lexicographically, so map iteration yields the canonical term order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The monomial `x_axis` for a 1-based axis.
    pub fn axis(nvars: usize, axis: usize) -> Self {
        assert!(
            axis >= 1 && axis <= nvars,
            "axis {axis} out of range 1..={nvars}"
        );
        let mut e = vec![0; nvars];
        e[axis - 1] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn times(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Renders like `x1*x2^2`; the constant monomial renders as `1`.
    pub(crate) fn render(&self) -> String {
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // Total degree first; ties broken so that monomials in earlier
        // variables sort first (x1*x2 before x2^2).
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `x1..xn` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, One::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::constant(nvars), c);
        p
    }

    /// The coordinate function `x_axis` (1-based).
    pub fn var(nvars: usize, axis: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::axis(nvars, axis), One::one());
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial has wrong variable count");
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_constant())
    }

    /// The value of a constant polynomial; `None` if any variable appears.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Zero::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_constant() {
                return Some(c.clone());
            }
        }
        None
    }

    /// The sole term of a monomial polynomial, if there is exactly one.
    pub fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Rational> {
        self.terms.get(m)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CalcError> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CalcError> {
        self.try_add(&(-other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CalcError> {
        self.check_nvars(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to `x_axis` (1-based).
    pub fn partial(&self, axis: usize) -> Result<Self, CalcError> {
        if axis < 1 || axis > self.nvars {
            return Err(CalcError::AxisOutOfRange {
                index: axis,
                dim: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[axis - 1];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[axis - 1] -= 1;
            out.add_term(
                Monomial::from_exponents(exps),
                c * Rational::from_integer(e.into()),
            );
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, CalcError> {
        if point.len() != self.nvars {
            return Err(CalcError::PointLength {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut acc: Rational = Zero::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    v = &v * x;
                }
            }
            acc = &acc + &v;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..e {
            out = out.try_mul(self).expect("same variable count");
        }
        out
    }

    fn check_nvars(&self, other: &Self) -> Result<(), CalcError> {
        if self.nvars != other.nvars {
            return Err(CalcError::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    /// Splits into (is_negative, body) for rendering inside sums. The body
    /// never starts with a minus sign; multi-term polynomials come back
    /// parenthesized with `is_negative == false`.
    pub(crate) fn render_signed(&self) -> (bool, String) {
        if self.is_zero() {
            return (false, "0".to_string());
        }
        if let Some((m, c)) = self.single_term() {
            let neg = c.is_negative();
            let mag = c.abs();
            let body = if m.is_constant() {
                format!("{mag}")
            } else if mag.is_one() {
                m.render()
            } else {
                format!("{}*{}", mag, m.render())
            };
            return (neg, body);
        }
        (false, format!("({self})"))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            let body = if m.is_constant() {
                format!("{mag}")
            } else if mag.is_one() {
                m.render()
            } else {
                format!("{}*{}", mag, m.render())
            };
            if first {
                if neg {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if neg {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("same variable count")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("same variable count")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("same variable count")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn x(i: usize) -> Polynomial {
        Polynomial::var(7, i)
    }

    fn random_poly(rng: &mut StdRng) -> Polynomial {
        let mut p = Polynomial::zero(7);
        for _ in 0..rng.gen_range(0..4) {
            let mut exps = vec![0u32; 7];
            for _ in 0..rng.gen_range(0..3) {
                exps[rng.gen_range(0..7)] += 1;
            }
            let c = rat(rng.gen_range(-3..=3), rng.gen_range(1..=2));
            p.add_term(Monomial::from_exponents(exps), c);
        }
        p
    }

    #[test]
    fn add_cancels_and_has_identity() {
        let p = &x(1) + &Polynomial::one(7);
        let q = -&x(1);
        assert_eq!(&p + &q, Polynomial::one(7));
        let r = random_poly(&mut StdRng::seed_from_u64(1));
        assert_eq!(&Polynomial::zero(7) + &r, r);
    }

    #[test]
    fn add_merges_like_terms() {
        let p = (&x(1) * &x(2)).scale(&rat(2, 1));
        let q = (&x(1) * &x(2)).scale(&rat(3, 1));
        assert_eq!(&p + &q, (&x(1) * &x(2)).scale(&rat(5, 1)));
    }

    #[test]
    fn mul_expands_difference_of_squares() {
        let p = &x(1) + &Polynomial::one(7);
        let q = &x(1) - &Polynomial::one(7);
        assert_eq!(&p * &q, &(&x(1) * &x(1)) - &Polynomial::one(7));
        assert!((&p * &Polynomial::zero(7)).is_zero());
        assert_eq!(&x(2) * &x(3), Polynomial::from_terms(7, [(
            Monomial::from_exponents(vec![0, 1, 1, 0, 0, 0, 0]),
            rat(1, 1),
        )]));
    }

    #[test]
    fn partial_matches_hand_computation() {
        let p = &x(1) * &x(2);
        assert_eq!(p.partial(1).unwrap(), x(2));
        assert!(p.partial(3).unwrap().is_zero());
        assert_eq!((&x(1) * &x(1)).partial(1).unwrap(), x(1).scale(&rat(2, 1)));
        assert!(matches!(
            p.partial(8),
            Err(CalcError::AxisOutOfRange { .. })
        ));
    }

    #[test]
    fn eval_matches_hand_computation() {
        let mut point: Vec<Rational> = vec![rat(0, 1); 7];
        point[0] = rat(1, 1);
        point[1] = rat(2, 1);
        assert_eq!((&x(1) + &x(2)).eval(&point).unwrap(), rat(3, 1));
        assert_eq!(
            Polynomial::constant(7, rat(5, 3)).eval(&point).unwrap(),
            rat(5, 3)
        );
        point[0] = rat(2, 1);
        point[1] = rat(3, 1);
        assert_eq!((&x(1) * &x(2)).eval(&point).unwrap(), rat(6, 1));
        assert!(matches!(
            x(1).eval(&point[..3]),
            Err(CalcError::PointLength { .. })
        ));
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..200 {
            let (p, q, r) = (
                random_poly(&mut rng),
                random_poly(&mut rng),
                random_poly(&mut rng),
            );
            assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            assert_eq!(&p + &q, &q + &p);
            assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            assert_eq!(&p * &q, &q * &p);
            assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        }
    }

    #[test]
    fn mixed_partials_commute() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let p = random_poly(&mut rng);
            for i in 1..=7 {
                for j in 1..=7 {
                    assert_eq!(
                        p.partial(i).unwrap().partial(j).unwrap(),
                        p.partial(j).unwrap().partial(i).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn eval_is_a_ring_homomorphism() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let (p, q) = (random_poly(&mut rng), random_poly(&mut rng));
            let point: Vec<Rational> = (0..7)
                .map(|_| rat(rng.gen_range(-2..=2), rng.gen_range(1..=3)))
                .collect();
            assert_eq!(
                (&p * &q).eval(&point).unwrap(),
                p.eval(&point).unwrap() * q.eval(&point).unwrap()
            );
            assert_eq!(
                (&p + &q).eval(&point).unwrap(),
                p.eval(&point).unwrap() + q.eval(&point).unwrap()
            );
        }
    }

    #[test]
    fn renders_in_graded_lex_order() {
        let p = Polynomial::from_terms(
            7,
            [
                (Monomial::constant(7), rat(2, 1)),
                (
                    Monomial::from_exponents(vec![1, 2, 0, 0, 0, 0, 0]),
                    rat(3, 1),
                ),
            ],
        );
        assert_eq!(p.to_string(), "2 + 3*x1*x2^2");
        let q = &x(4) - &x(1).scale(&rat(1, 2));
        assert_eq!(q.to_string(), "-1/2*x1 + x4");
    }
}
