//! Randomized inputs for the property suites: sparse polynomial forms and
//! multivectors with small rational coefficients, and locally Hamiltonian
//! multivector fields sampled exactly from the kernel of `Q ↦ d(Q ⌟ ω)`
//! restricted to bounded-degree coefficients.

use num_traits::Zero;
use rand::Rng;

use crate::exterior::{contract, Form, MultiIndex, MultiVector};
use crate::linalg::QMatrix;
use crate::msymp::{HamiltonianPair, MsympStructure};
use crate::polyring::{Monomial, Polynomial};
use crate::rat;
use crate::Rational;

/// All exponent vectors on `dim` variables with total degree ≤ `max_deg`.
pub fn monomials_up_to(dim: usize, max_deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; dim];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, left: u32) {
        if pos == current.len() {
            out.push(Monomial::from_exponents(current.clone()));
            return;
        }
        for e in 0..=left {
            current[pos] = e;
            rec(out, current, pos + 1, left - e);
        }
        current[pos] = 0;
    }
    rec(&mut out, &mut current, 0, max_deg);
    out
}

fn small_nonzero<R: Rng>(rng: &mut R) -> Rational {
    let n = loop {
        let v = rng.gen_range(-3i64..=3);
        if v != 0 {
            break v;
        }
    };
    rat(n, rng.gen_range(1..=2))
}

pub fn random_polynomial<R: Rng>(
    rng: &mut R,
    dim: usize,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    let mut p = Polynomial::zero(dim);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let mut exps = vec![0u32; dim];
        for _ in 0..rng.gen_range(0..=max_deg) {
            exps[rng.gen_range(0..dim)] += 1;
        }
        p.add_term(Monomial::from_exponents(exps), small_nonzero(rng));
    }
    p
}

pub fn random_form<R: Rng>(
    rng: &mut R,
    dim: usize,
    grade: usize,
    max_deg: u32,
    max_terms: usize,
) -> Form {
    let all = MultiIndex::all(dim, grade);
    let mut out = Form::zero(dim, grade);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let idx = all[rng.gen_range(0..all.len())].clone();
        out.add_term(idx, random_polynomial(rng, dim, max_deg, 1));
    }
    out
}

pub fn random_multivector<R: Rng>(
    rng: &mut R,
    dim: usize,
    grade: usize,
    max_deg: u32,
    max_terms: usize,
) -> MultiVector {
    let all = MultiIndex::all(dim, grade);
    let mut out = MultiVector::zero(dim, grade);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let idx = all[rng.gen_range(0..all.len())].clone();
        out.add_term(idx, random_polynomial(rng, dim, max_deg, 1));
    }
    out
}

pub fn random_constant_multivector<R: Rng>(rng: &mut R, dim: usize, grade: usize) -> MultiVector {
    let all = MultiIndex::all(dim, grade);
    let mut out = MultiVector::zero(dim, grade);
    for _ in 0..rng.gen_range(1..=3) {
        let idx = all[rng.gen_range(0..all.len())].clone();
        out.add_term(idx, Polynomial::constant(dim, small_nonzero(rng)));
    }
    out
}

/// A closed form of grade ≥ 1 built as `d` of a random one grade lower.
pub fn random_closed_form<R: Rng>(rng: &mut R, dim: usize, grade: usize, max_deg: u32) -> Form {
    assert!(grade >= 1);
    random_form(rng, dim, grade - 1, max_deg + 1, 3).d()
}

/// Samples multivector fields Q of a fixed grade with `d(Q ⌟ ω) = 0`, i.e.
/// locally Hamiltonian fields of the given structure, by drawing random
/// combinations from an exact kernel basis of the linear map
/// `Q ↦ d(Q ⌟ ω)` on coefficients of bounded degree.
pub struct LocallyHamiltonianSampler {
    basis: Vec<MultiVector>,
}

impl LocallyHamiltonianSampler {
    pub fn new(structure: &MsympStructure, q_grade: usize, max_deg: u32) -> Self {
        assert!(q_grade >= 1 && q_grade <= structure.k(), "grade in 1..=k");
        let dim = structure.dim();
        let col_monos = monomials_up_to(dim, max_deg);
        let col_indices = MultiIndex::all(dim, q_grade);
        let out_grade = structure.degree() - q_grade + 1;
        let cols: Vec<(Monomial, MultiIndex)> = col_monos
            .iter()
            .flat_map(|m| col_indices.iter().map(move |i| (m.clone(), i.clone())))
            .collect();

        // d strictly lowers coefficient degree, so image coefficients live
        // in degree ≤ max_deg − 1; no rows at all when the output grade
        // overflows the dimension.
        let basis = if out_grade > dim || max_deg == 0 {
            cols.iter()
                .map(|(m, i)| {
                    MultiVector::from_terms(
                        dim,
                        q_grade,
                        [(i.clone(), Polynomial::from_terms(dim, [(m.clone(), rat(1, 1))]))],
                    )
                })
                .collect()
        } else {
            let row_monos = monomials_up_to(dim, max_deg - 1);
            let row_indices = MultiIndex::all(dim, out_grade);
            let rows: Vec<(Monomial, MultiIndex)> = row_monos
                .iter()
                .flat_map(|m| row_indices.iter().map(move |i| (m.clone(), i.clone())))
                .collect();
            let mut matrix = QMatrix::zeros(rows.len(), cols.len());
            for (c, (mono, idx)) in cols.iter().enumerate() {
                let q = MultiVector::from_terms(
                    dim,
                    q_grade,
                    [(idx.clone(), Polynomial::from_terms(dim, [(mono.clone(), rat(1, 1))]))],
                );
                let image = contract(&q, structure.omega())
                    .expect("same dimension")
                    .d();
                for (r, (rm, ri)) in rows.iter().enumerate() {
                    if let Some(p) = image.coeff(ri) {
                        if let Some(v) = p.coeff(rm) {
                            *matrix.at_mut(r, c) = v.clone();
                        }
                    }
                }
            }
            matrix
                .kernel_basis()
                .into_iter()
                .map(|v| {
                    let mut q = MultiVector::zero(dim, q_grade);
                    for (c, (mono, idx)) in cols.iter().enumerate() {
                        if !v[c].is_zero() {
                            q.add_term(
                                idx.clone(),
                                Polynomial::from_terms(dim, [(mono.clone(), v[c].clone())]),
                            );
                        }
                    }
                    q
                })
                .collect()
        };
        LocallyHamiltonianSampler { basis }
    }

    pub fn kernel_dim(&self) -> usize {
        self.basis.len()
    }

    /// A random small combination of kernel basis elements.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> MultiVector {
        let mut out = self.basis[0].scale(&rat(0, 1));
        for _ in 0..rng.gen_range(1..=3) {
            let pick = &self.basis[rng.gen_range(0..self.basis.len())];
            out = &out + &pick.scale(&small_nonzero(rng));
        }
        out
    }

    /// A Hamiltonian pair `(Q, α)`: Q sampled as above, α recovered from the
    /// radial homotopy so that `Q ⌟ ω = dα` holds exactly.
    pub fn sample_pair<R: Rng>(
        &self,
        structure: &MsympStructure,
        rng: &mut R,
    ) -> HamiltonianPair {
        loop {
            let q = self.sample(rng);
            let tau = contract(&q, structure.omega()).expect("same dimension");
            let alpha = match tau.exact_potential() {
                Some(a) => a,
                None => continue,
            };
            return HamiltonianPair::new(structure, q, alpha).expect("closed by construction");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_up_to(7, 0).len(), 1);
        assert_eq!(monomials_up_to(7, 1).len(), 8);
        assert_eq!(monomials_up_to(7, 2).len(), 36);
        assert_eq!(monomials_up_to(2, 3).len(), 10);
    }

    #[test]
    fn sampler_produces_locally_hamiltonian_fields() {
        let mut rng = StdRng::seed_from_u64(101);
        let s3 = MsympStructure::build(g2::phi0()).unwrap();
        let s4 = MsympStructure::build(g2::star_phi0()).unwrap();
        for (s, grades) in [(&s3, vec![1, 2]), (&s4, vec![1, 2, 3])] {
            for q_grade in grades {
                let sampler = LocallyHamiltonianSampler::new(s, q_grade, 1);
                assert!(sampler.kernel_dim() > 0, "grade {q_grade}");
                for _ in 0..10 {
                    let q = sampler.sample(&mut rng);
                    assert_eq!(q.grade(), q_grade);
                    assert!(contract(&q, s.omega()).unwrap().d().is_zero());
                }
            }
        }
    }

    #[test]
    fn sampler_kernel_contains_nonconstant_fields() {
        let s3 = MsympStructure::build(g2::phi0()).unwrap();
        let sampler = LocallyHamiltonianSampler::new(&s3, 1, 1);
        // strictly more kernel directions than the 7 constant fields
        assert!(sampler.kernel_dim() > 7, "dim = {}", sampler.kernel_dim());
    }

    #[test]
    fn sampled_pairs_satisfy_the_contraction_equation() {
        let mut rng = StdRng::seed_from_u64(103);
        let s4 = MsympStructure::build(g2::star_phi0()).unwrap();
        for q_grade in [1, 2, 3] {
            let sampler = LocallyHamiltonianSampler::new(&s4, q_grade, 1);
            for _ in 0..5 {
                let pair = sampler.sample_pair(&s4, &mut rng);
                assert_eq!(
                    contract(pair.multivector(), s4.omega()).unwrap(),
                    pair.form().d()
                );
            }
        }
    }
}
