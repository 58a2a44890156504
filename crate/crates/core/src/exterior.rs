//! Sparse exterior algebra on ℝⁿ with polynomial coefficients.
//!
//! [`Form`] and [`MultiVector`] share one representation but are distinct
//! types, so a form can never be wedged with a multivector by accident;
//! contraction is the only operation that mixes the two sides. Basis signs
//! come from counting merge inversions, and the contraction of a basis
//! q-vector applies its factors in increasing order, the first factor
//! innermost: `(X1 ^ ... ^ Xq) ⌟ φ = Xq ⌟ ... ⌟ X1 ⌟ φ`.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use num_traits::One;

use crate::error::CalcError;
use crate::polyring::{Monomial, Polynomial};
use crate::util::{increasing_subsets, parity};
use crate::Rational;

/// Strictly increasing sequence of axis labels in `1..=dim`; the label of a
/// basis element of Λˡ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn new(indices: &[u8]) -> Result<Self, CalcError> {
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.first().is_some_and(|&i| i == 0) {
            return Err(CalcError::BadMultiIndex);
        }
        Ok(MultiIndex(indices.to_vec()))
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn single(axis: u8) -> Self {
        MultiIndex(vec![axis])
    }

    /// All grade-k multi-indices on `1..=dim`, lexicographically.
    pub fn all(dim: usize, grade: usize) -> Vec<Self> {
        increasing_subsets(dim, grade)
            .into_iter()
            .map(MultiIndex)
            .collect()
    }

    pub fn grade(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn contains(&self, axis: u8) -> bool {
        self.0.binary_search(&axis).is_ok()
    }

    /// Merges two disjoint increasing sequences, returning the permutation
    /// sign of sorting their concatenation; `None` if they share an index.
    pub fn merge(&self, other: &Self) -> Option<(i32, Self)> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut inversions = 0usize;
        while i < a.len() && j < b.len() {
            if a[i] == b[j] {
                return None;
            }
            if a[i] < b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                // b[j] crosses over the remaining elements of a
                inversions += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some((parity(inversions as i64), MultiIndex(out)))
    }

    /// Removes `axis`, returning (-1)^position; `None` if absent.
    pub fn remove(&self, axis: u8) -> Option<(i32, Self)> {
        let pos = self.0.binary_search(&axis).ok()?;
        let mut rest = self.0.clone();
        rest.remove(pos);
        Some((parity(pos as i64), MultiIndex(rest)))
    }

    /// The complement within `1..=dim` and the sign of the permutation
    /// `(self, complement)` of `(1, ..., dim)`.
    pub fn complement(&self, dim: usize) -> (i32, Self) {
        let comp: Vec<u8> = (1..=dim as u8).filter(|i| !self.contains(*i)).collect();
        let mut inversions = 0usize;
        for &a in &self.0 {
            inversions += comp.iter().filter(|&&b| b < a).count();
        }
        (parity(inversions as i64), MultiIndex(comp))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&i| i <= 9) {
            for i in &self.0 {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            write!(f, "{}", parts.join("_"))
        }
    }
}

mod sealed {
    pub trait Sealed {}
}

/// Marker distinguishing the cotangent side (forms) from the tangent side
/// (multivector fields).
pub trait Variance: sealed::Sealed + fmt::Debug + Clone + Copy + PartialEq + Eq + 'static {
    fn render_basis(idx: &MultiIndex) -> String;
}

/// Marker for differential forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cotangent {}

/// Marker for multivector fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tangent {}

impl sealed::Sealed for Cotangent {}
impl sealed::Sealed for Tangent {}

impl Variance for Cotangent {
    fn render_basis(idx: &MultiIndex) -> String {
        format!("dx{idx}")
    }
}

impl Variance for Tangent {
    fn render_basis(idx: &MultiIndex) -> String {
        let parts: Vec<String> = idx.indices().iter().map(|i| format!("e{i}")).collect();
        parts.join("^")
    }
}

/// Homogeneous sparse element of Λ(V*) or Λ(V) with polynomial coefficients.
///
/// The stored grade may exceed `dim` only for the zero element; any term key
/// has exactly `grade` strictly increasing indices and a nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedObject<V: Variance> {
    dim: usize,
    grade: usize,
    terms: BTreeMap<MultiIndex, Polynomial>,
    _marker: PhantomData<V>,
}

/// Differential form of a single grade.
pub type Form = GradedObject<Cotangent>;

/// Multivector field of a single grade.
pub type MultiVector = GradedObject<Tangent>;

impl<V: Variance> GradedObject<V> {
    pub fn zero(dim: usize, grade: usize) -> Self {
        GradedObject {
            dim,
            grade,
            terms: BTreeMap::new(),
            _marker: PhantomData,
        }
    }

    /// Grade-0 element carrying a function.
    pub fn scalar(dim: usize, p: Polynomial) -> Self {
        assert_eq!(p.nvars(), dim, "coefficient has wrong variable count");
        let mut out = Self::zero(dim, 0);
        out.add_term(MultiIndex::empty(), p);
        out
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::scalar(dim, Polynomial::constant(dim, c))
    }

    /// Unit-coefficient basis element, e.g. `dx23` or `e2^e3`.
    pub fn basis(dim: usize, indices: &[u8]) -> Result<Self, CalcError> {
        let idx = MultiIndex::new(indices)?;
        if let Some(&last) = idx.indices().last() {
            if last as usize > dim {
                return Err(CalcError::AxisOutOfRange {
                    index: last as usize,
                    dim,
                });
            }
        }
        let mut out = Self::zero(dim, idx.grade());
        out.add_term(idx, Polynomial::one(dim));
        Ok(out)
    }

    pub fn from_terms(
        dim: usize,
        grade: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Polynomial)>,
    ) -> Self {
        let mut out = Self::zero(dim, grade);
        for (idx, p) in terms {
            out.add_term(idx, p);
        }
        out
    }

    pub(crate) fn add_term(&mut self, idx: MultiIndex, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        assert_eq!(idx.grade(), self.grade, "term grade mismatch");
        assert_eq!(p.nvars(), self.dim, "coefficient has wrong variable count");
        assert!(
            idx.indices().last().is_none_or(|&i| i as usize <= self.dim),
            "axis label exceeds the dimension"
        );
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(p);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Option<&Polynomial> {
        self.terms.get(idx)
    }

    /// The function carried by a grade-0 element; `None` for grade ≥ 1.
    pub fn as_scalar(&self) -> Option<Polynomial> {
        if self.grade != 0 {
            return None;
        }
        Some(
            self.terms
                .get(&MultiIndex::empty())
                .cloned()
                .unwrap_or_else(|| Polynomial::zero(self.dim)),
        )
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(|p| p.is_constant())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.grade);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), p.scale(c));
        }
        out
    }

    pub fn scale_poly(&self, f: &Polynomial) -> Self {
        assert_eq!(f.nvars(), self.dim, "coefficient has wrong variable count");
        let mut out = Self::zero(self.dim, self.grade);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), p * f);
        }
        out
    }

    /// Bilinear wedge. Zero whenever two term indices overlap, in particular
    /// always zero when the grades sum past `dim`.
    pub fn wedge(&self, other: &Self) -> Result<Self, CalcError> {
        self.check_dim(other.dim)?;
        let mut out = Self::zero(self.dim, self.grade + other.grade);
        for (ia, pa) in &self.terms {
            for (ib, pb) in &other.terms {
                if let Some((sign, merged)) = ia.merge(ib) {
                    let mut c = pa * pb;
                    if sign < 0 {
                        c = -&c;
                    }
                    out.add_term(merged, c);
                }
            }
        }
        Ok(out)
    }

    /// Evaluates every coefficient at a point, keeping the result symbolic.
    pub fn eval_at(&self, point: &[Rational]) -> Result<Self, CalcError> {
        if point.len() != self.dim {
            return Err(CalcError::PointLength {
                expected: self.dim,
                found: point.len(),
            });
        }
        let mut out = Self::zero(self.dim, self.grade);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), Polynomial::constant(self.dim, p.eval(point)?));
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

impl<V: Variance> std::ops::Add for &GradedObject<V> {
    type Output = GradedObject<V>;
    fn add(self, rhs: &GradedObject<V>) -> GradedObject<V> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        // the zero of any grade is the zero of the whole algebra
        if self.is_zero() && self.grade != rhs.grade {
            return rhs.clone();
        }
        if rhs.is_zero() && self.grade != rhs.grade {
            return self.clone();
        }
        assert_eq!(self.grade, rhs.grade, "grade mismatch in sum");
        let mut out = self.clone();
        for (idx, p) in &rhs.terms {
            out.add_term(idx.clone(), p.clone());
        }
        out
    }
}

impl<V: Variance> std::ops::Sub for &GradedObject<V> {
    type Output = GradedObject<V>;
    fn sub(self, rhs: &GradedObject<V>) -> GradedObject<V> {
        self + &(-rhs)
    }
}

impl<V: Variance> std::ops::Neg for &GradedObject<V> {
    type Output = GradedObject<V>;
    fn neg(self) -> GradedObject<V> {
        let mut out = GradedObject::zero(self.dim, self.grade);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), -p);
        }
        out
    }
}

impl Form {
    /// Exterior derivative; the zero (n+1)-grade object for top-grade input.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.dim, self.grade + 1);
        for (idx, p) in &self.terms {
            for axis in 1..=self.dim as u8 {
                let dp = p.partial(axis as usize).expect("axis in range");
                if dp.is_zero() {
                    continue;
                }
                if let Some((sign, merged)) = MultiIndex::single(axis).merge(idx) {
                    out.add_term(merged, if sign < 0 { -&dp } else { dp });
                }
            }
        }
        out
    }

    /// A primitive under d, via the radial homotopy of the Poincaré lemma:
    /// `d(result) == self` whenever `self` is closed of grade ≥ 1. Returns
    /// `None` for grade 0 or non-closed input.
    pub fn exact_potential(&self) -> Option<Form> {
        if self.grade == 0 || !self.d().is_zero() {
            return None;
        }
        let r = self.grade as u32;
        let mut out = Form::zero(self.dim, self.grade - 1);
        for (idx, p) in &self.terms {
            for (mono, c) in p.terms() {
                let weight = Rational::from_integer((mono.degree() + r).into());
                for &axis in idx.indices() {
                    let (sign, rest) = idx.remove(axis).expect("axis present");
                    let scaled = c / &weight;
                    let coeff = Polynomial::from_terms(
                        self.dim,
                        [(
                            mono.times_axis(axis as usize),
                            if sign < 0 { -scaled } else { scaled },
                        )],
                    );
                    out.add_term(rest, coeff);
                }
            }
        }
        debug_assert_eq!(out.d(), *self);
        Some(out)
    }
}

/// Interior product `Q ⌟ α`, bilinear over polynomial coefficients.
///
/// On basis pairs the factors of the q-vector are applied in increasing
/// order with the first factor innermost; grade-0 multivectors multiply, and
/// the result is zero (of grade 0) when the multivector grade exceeds the
/// form grade.
pub fn contract(q: &MultiVector, alpha: &Form) -> Result<Form, CalcError> {
    if q.dim() != alpha.dim() {
        return Err(CalcError::DimensionMismatch {
            expected: alpha.dim(),
            found: q.dim(),
        });
    }
    if q.grade() > alpha.grade() {
        return Ok(Form::zero(alpha.dim(), 0));
    }
    let mut out = Form::zero(alpha.dim(), alpha.grade() - q.grade());
    for (iq, pq) in q.terms() {
        for (ia, pa) in alpha.terms() {
            if let Some((sign, rest)) = contract_basis(iq, ia) {
                let mut c = pq * pa;
                if sign < 0 {
                    c = -&c;
                }
                out.add_term(rest, c);
            }
        }
    }
    Ok(out)
}

/// `∂_I ⌟ dx_J` for increasing multi-indices: applies `∂_{i1}` first.
fn contract_basis(i: &MultiIndex, j: &MultiIndex) -> Option<(i32, MultiIndex)> {
    let mut sign = 1;
    let mut rest = j.clone();
    for &axis in i.indices() {
        let (s, r) = rest.remove(axis)?;
        sign *= s;
        rest = r;
    }
    Some((sign, rest))
}

impl Monomial {
    pub(crate) fn times_axis(&self, axis: usize) -> Monomial {
        let mut exps = self.exponents().to_vec();
        exps[axis - 1] += 1;
        Monomial::from_exponents(exps)
    }
}

impl<V: Variance> fmt::Display for GradedObject<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.grade == 0 {
            return write!(f, "{}", self.as_scalar().unwrap());
        }
        let mut first = true;
        for (idx, p) in &self.terms {
            let basis = V::render_basis(idx);
            let (neg, coeff) = p.render_signed();
            let body = if coeff == "1" {
                basis
            } else {
                format!("{coeff}*{basis}")
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

/// Equality that treats all zero objects alike regardless of grade label.
pub fn eq_or_both_zero<V: Variance>(a: &GradedObject<V>, b: &GradedObject<V>) -> bool {
    a == b || (a.is_zero() && b.is_zero())
}

/// The coordinate vector field `∂_axis`.
pub fn coordinate_vector(dim: usize, axis: u8) -> MultiVector {
    MultiVector::basis(dim, &[axis]).expect("axis in range")
}

/// A vector field from its component functions.
pub fn vector_field(components: Vec<Polynomial>) -> MultiVector {
    let dim = components.len();
    let mut out = MultiVector::zero(dim, 1);
    for (i, p) in components.into_iter().enumerate() {
        out.add_term(MultiIndex::single(i as u8 + 1), p);
    }
    out
}

/// One as a grade-0 multivector, handy as a wedge accumulator seed.
pub fn unit_multivector(dim: usize) -> MultiVector {
    MultiVector::constant(dim, One::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2;
    use crate::rat;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn form(dim: usize, idx: &[u8]) -> Form {
        Form::basis(dim, idx).unwrap()
    }

    fn mv(dim: usize, idx: &[u8]) -> MultiVector {
        MultiVector::basis(dim, idx).unwrap()
    }

    fn random_form(rng: &mut StdRng, dim: usize, grade: usize) -> Form {
        let all = MultiIndex::all(dim, grade);
        let mut out = Form::zero(dim, grade);
        for _ in 0..rng.gen_range(1..=3) {
            let idx = all[rng.gen_range(0..all.len())].clone();
            let mut exps = vec![0u32; dim];
            for _ in 0..rng.gen_range(0..3) {
                exps[rng.gen_range(0..dim)] += 1;
            }
            out.add_term(
                idx,
                Polynomial::from_terms(
                    dim,
                    [(Monomial::from_exponents(exps), rat(rng.gen_range(-3..=3), 1))],
                ),
            );
        }
        out
    }

    fn random_mv(rng: &mut StdRng, dim: usize, grade: usize) -> MultiVector {
        let all = MultiIndex::all(dim, grade);
        let mut out = MultiVector::zero(dim, grade);
        for _ in 0..rng.gen_range(1..=3) {
            let idx = all[rng.gen_range(0..all.len())].clone();
            let mut exps = vec![0u32; dim];
            for _ in 0..rng.gen_range(0..3) {
                exps[rng.gen_range(0..dim)] += 1;
            }
            out.add_term(
                idx,
                Polynomial::from_terms(
                    dim,
                    [(Monomial::from_exponents(exps), rat(rng.gen_range(-3..=3), 1))],
                ),
            );
        }
        out
    }

    /// Brute-force permutation sign: sorts by adjacent swaps.
    fn bubble_sign(seq: &[u8]) -> i32 {
        let mut v = seq.to_vec();
        let mut sign = 1;
        for i in 0..v.len() {
            for j in 0..v.len().saturating_sub(1 + i) {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        sign
    }

    #[test]
    fn merge_sign_matches_bubble_sort_oracle() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..300 {
            let ka = rng.gen_range(0..=4);
            let kb = rng.gen_range(0..=4);
            let all = MultiIndex::all(8, ka);
            let a = all[rng.gen_range(0..all.len())].clone();
            let all = MultiIndex::all(8, kb);
            let b = all[rng.gen_range(0..all.len())].clone();
            let merged = a.merge(&b);
            let overlap = a.indices().iter().any(|i| b.contains(*i));
            if overlap {
                assert!(merged.is_none());
            } else {
                let concat: Vec<u8> = a.indices().iter().chain(b.indices()).copied().collect();
                let (sign, _) = merged.unwrap();
                assert_eq!(sign, bubble_sign(&concat));
            }
        }
    }

    #[test]
    fn complement_sign_matches_bubble_sort_oracle() {
        for grade in 0..=7 {
            for idx in MultiIndex::all(7, grade) {
                let (sign, comp) = idx.complement(7);
                let concat: Vec<u8> =
                    idx.indices().iter().chain(comp.indices()).copied().collect();
                assert_eq!(sign, bubble_sign(&concat));
            }
        }
    }

    #[test]
    fn wedge_is_antisymmetric_on_basis_one_forms() {
        let a = form(7, &[1]).wedge(&form(7, &[2])).unwrap();
        assert_eq!(a, form(7, &[1, 2]));
        let b = form(7, &[2]).wedge(&form(7, &[1])).unwrap();
        assert_eq!(b, -&form(7, &[1, 2]));
        assert!(form(7, &[1]).wedge(&form(7, &[1])).unwrap().is_zero());
    }

    #[test]
    fn phi0_wedge_cancels_against_mixed_two_form() {
        // φ₀ ∧ (dx23 − dx45): the two dx12345 contributions cancel exactly.
        let beta = &form(7, &[2, 3]) - &form(7, &[4, 5]);
        let expected = &form(7, &[1, 2, 3, 6, 7]) - &form(7, &[1, 4, 5, 6, 7]);
        assert_eq!(g2::phi0().wedge(&beta).unwrap(), expected);
    }

    #[test]
    fn wedge_graded_commutativity_and_associativity() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..200 {
            let p = rng.gen_range(0..=3);
            let q = rng.gen_range(0..=3);
            let a = random_form(&mut rng, 7, p);
            let b = random_form(&mut rng, 7, q);
            let ab = a.wedge(&b).unwrap();
            let ba = b
                .wedge(&a)
                .unwrap()
                .scale(&crate::util::parity_rat((p * q) as i64));
            assert!(eq_or_both_zero(&ab, &ba));
            let r = rng.gen_range(0..=2);
            let c = random_form(&mut rng, 7, r);
            assert!(eq_or_both_zero(
                &a.wedge(&b).unwrap().wedge(&c).unwrap(),
                &a.wedge(&b.wedge(&c).unwrap()).unwrap()
            ));
        }
    }

    #[test]
    fn coordinate_contractions_of_phi0_match_expansion() {
        // the seven rows of the basis expansion of X ⌟ φ₀
        let phi = g2::phi0();
        let expect: [&[(&[u8], i64)]; 7] = [
            &[(&[2, 3], 1), (&[4, 5], 1), (&[6, 7], 1)],
            &[(&[1, 3], -1), (&[4, 6], 1), (&[5, 7], -1)],
            &[(&[1, 2], 1), (&[4, 7], -1), (&[5, 6], -1)],
            &[(&[1, 5], -1), (&[2, 6], -1), (&[3, 7], 1)],
            &[(&[1, 4], 1), (&[2, 7], 1), (&[3, 6], 1)],
            &[(&[1, 7], -1), (&[2, 4], 1), (&[3, 5], -1)],
            &[(&[1, 6], 1), (&[2, 5], -1), (&[3, 4], -1)],
        ];
        for (i, row) in expect.iter().enumerate() {
            let mut want = Form::zero(7, 2);
            for (idx, c) in row.iter() {
                want.add_term(
                    MultiIndex::new(idx).unwrap(),
                    Polynomial::constant(7, rat(*c, 1)),
                );
            }
            let got = contract(&coordinate_vector(7, i as u8 + 1), &phi).unwrap();
            assert_eq!(got, want, "row {}", i + 1);
        }
    }

    #[test]
    fn e67_contractions_give_the_worked_values() {
        // A self-wedge e6^e6 is identically zero, so e6^e7 is the only
        // nonzero reading consistent with both companion values below.
        let q = mv(7, &[6, 7]);
        let got = contract(&q, &g2::star_phi0()).unwrap();
        assert_eq!(got, &form(7, &[2, 3]) + &form(7, &[4, 5]));
        assert_eq!(got.to_string(), "dx23 + dx45");
        assert_eq!(contract(&q, &g2::phi0()).unwrap(), form(7, &[1]));
    }

    #[test]
    fn contraction_of_function_multiplies_and_high_grade_gives_zero() {
        let f = MultiVector::scalar(7, Polynomial::var(7, 3));
        let alpha = form(7, &[1, 2]);
        assert_eq!(
            contract(&f, &alpha).unwrap(),
            alpha.scale_poly(&Polynomial::var(7, 3))
        );
        let q = mv(7, &[1, 2, 3]);
        assert!(contract(&q, &form(7, &[1, 2])).unwrap().is_zero());
    }

    #[test]
    fn contract_rejects_dimension_mismatch() {
        let q = mv(6, &[1]);
        let alpha = form(7, &[1, 2]);
        assert!(matches!(
            contract(&q, &alpha),
            Err(CalcError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn d_matches_hand_computations() {
        // d(x2 dx3 + x4 dx5 + x6 dx7) = dx23 + dx45 + dx67
        let alpha = Form::from_terms(
            7,
            1,
            [
                (MultiIndex::single(3), Polynomial::var(7, 2)),
                (MultiIndex::single(5), Polynomial::var(7, 4)),
                (MultiIndex::single(7), Polynomial::var(7, 6)),
            ],
        );
        let want = &(&form(7, &[2, 3]) + &form(7, &[4, 5])) + &form(7, &[6, 7]);
        assert_eq!(alpha.d(), want);
        assert_eq!(
            alpha.d(),
            contract(&coordinate_vector(7, 1), &g2::phi0()).unwrap()
        );

        // d(x4 dx5 + x2 dx3) = dx45 + dx23
        let alpha = Form::from_terms(
            7,
            1,
            [
                (MultiIndex::single(5), Polynomial::var(7, 4)),
                (MultiIndex::single(3), Polynomial::var(7, 2)),
            ],
        );
        assert_eq!(alpha.d(), &form(7, &[4, 5]) + &form(7, &[2, 3]));
    }

    #[test]
    fn d_squared_is_zero_every_grade() {
        let mut rng = StdRng::seed_from_u64(23);
        for grade in 0..=7 {
            for _ in 0..40 {
                let a = random_form(&mut rng, 7, grade);
                assert!(a.d().d().is_zero());
            }
        }
    }

    #[test]
    fn contraction_splits_over_wedge_factors() {
        // contract(A ∧ B, α) = contract(B, contract(A, α)), the iterated
        // contraction convention extended bilinearly.
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..200 {
            let qa = rng.gen_range(0..=2);
            let qb = rng.gen_range(0..=2);
            let l = rng.gen_range(0..=5);
            let a = random_mv(&mut rng, 7, qa);
            let b = random_mv(&mut rng, 7, qb);
            let alpha = random_form(&mut rng, 7, l);
            let lhs = contract(&a.wedge(&b).unwrap(), &alpha).unwrap();
            let rhs = contract(&b, &contract(&a, &alpha).unwrap()).unwrap();
            assert!(eq_or_both_zero(&lhs, &rhs));
        }
    }

    #[test]
    fn single_vector_contraction_is_a_graded_derivation() {
        // X ⌟ (a ∧ b) = (X ⌟ a) ∧ b + (-1)^{|a|} a ∧ (X ⌟ b)
        let mut rng = StdRng::seed_from_u64(37);
        for _ in 0..200 {
            let p = rng.gen_range(0..=3);
            let q = rng.gen_range(0..=3);
            let x = random_mv(&mut rng, 7, 1);
            let a = random_form(&mut rng, 7, p);
            let b = random_form(&mut rng, 7, q);
            let lhs = contract(&x, &a.wedge(&b).unwrap()).unwrap();
            let t1 = contract(&x, &a).unwrap().wedge(&b).unwrap();
            let t2 = a
                .wedge(&contract(&x, &b).unwrap())
                .unwrap()
                .scale(&crate::util::parity_rat(p as i64));
            let rhs = &t1 + &t2;
            assert!(eq_or_both_zero(&lhs, &rhs));
        }
    }

    #[test]
    fn eval_at_freezes_coefficients() {
        let alpha = Form::from_terms(7, 1, [(MultiIndex::single(2), Polynomial::var(7, 1))]);
        let mut point = vec![rat(0, 1); 7];
        point[0] = rat(3, 1);
        assert_eq!(
            alpha.eval_at(&point).unwrap(),
            form(7, &[2]).scale(&rat(3, 1))
        );
        let phi = g2::phi0();
        assert_eq!(phi.eval_at(&point).unwrap(), phi);
        let alpha = Form::from_terms(
            7,
            1,
            [
                (MultiIndex::single(5), Polynomial::var(7, 4)),
                (MultiIndex::single(3), Polynomial::var(7, 2)),
            ],
        );
        assert!(alpha.eval_at(&vec![rat(0, 1); 7]).unwrap().is_zero());
    }

    #[test]
    fn exact_potential_inverts_d_on_closed_forms() {
        let mut rng = StdRng::seed_from_u64(41);
        for grade in 1..=6 {
            for _ in 0..40 {
                let tau = random_form(&mut rng, 7, grade).d();
                if tau.is_zero() {
                    continue;
                }
                let alpha = tau.exact_potential().expect("closed");
                assert_eq!(alpha.d(), tau);
            }
        }
        // non-closed input is rejected
        let bad = Form::from_terms(7, 1, [(MultiIndex::single(2), Polynomial::var(7, 1))]);
        assert!(bad.exact_potential().is_none());
    }

    #[test]
    fn rendering_is_canonical() {
        let phi = g2::phi0();
        assert_eq!(
            phi.to_string(),
            "dx123 + dx145 + dx167 + dx246 - dx257 - dx347 - dx356"
        );
        let q = mv(7, &[6, 7]);
        assert_eq!(q.to_string(), "e6^e7");
        let alpha = Form::from_terms(
            7,
            1,
            [
                (MultiIndex::single(5), Polynomial::var(7, 4)),
                (MultiIndex::single(3), Polynomial::var(7, 2)),
            ],
        );
        assert_eq!(alpha.to_string(), "x2*dx3 + x4*dx5");
    }
}
