//! Seeded random polynomial families for the identity checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{coefficient_from_int, MultiIndex, PhasePolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolynomialFamily {
    pub max_dimension: usize,
    pub max_degree: u32,
    /// Coefficients are integers in `[-coefficient_bound, coefficient_bound]`.
    pub coefficient_bound: i64,
    pub max_terms: usize,
}

impl Default for PolynomialFamily {
    fn default() -> Self {
        PolynomialFamily {
            max_dimension: 2,
            max_degree: 6,
            coefficient_bound: 5,
            max_terms: 4,
        }
    }
}

impl PolynomialFamily {
    /// A polynomial of total degree at most `max_degree` in `dimension`
    /// degrees of freedom. May be zero when every drawn coefficient is 0.
    pub fn polynomial<R: Rng>(&self, rng: &mut R, dimension: usize) -> PhasePolynomial {
        let terms = rng.gen_range(1..=self.max_terms);
        let mut out = Vec::with_capacity(terms);
        for _ in 0..terms {
            let degree = rng.gen_range(0..=self.max_degree);
            let mut q = vec![0u32; dimension];
            let mut p = vec![0u32; dimension];
            for _ in 0..degree {
                let v = rng.gen_range(0..2 * dimension);
                if v < dimension {
                    q[v] += 1;
                } else {
                    p[v - dimension] += 1;
                }
            }
            let c = rng.gen_range(-self.coefficient_bound..=self.coefficient_bound);
            out.push((MultiIndex::new(q, p, 0), coefficient_from_int(c, 0)));
        }
        PhasePolynomial::from_terms(dimension, out).expect("dimensions agree")
    }

    /// `count` triples sharing a dimension drawn from `1..=max_dimension`.
    pub fn triples(&self, seed: u64, count: usize) -> Vec<[PhasePolynomial; 3]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let d = rng.gen_range(1..=self.max_dimension);
                [
                    self.polynomial(&mut rng, d),
                    self.polynomial(&mut rng, d),
                    self.polynomial(&mut rng, d),
                ]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_family_is_reproducible() {
        let fam = PolynomialFamily::default();
        assert_eq!(fam.triples(7, 10), fam.triples(7, 10));
        assert_ne!(fam.triples(7, 10), fam.triples(8, 10));
    }

    #[test]
    fn respects_bounds() {
        let fam = PolynomialFamily::default();
        for [f, g, h] in fam.triples(1, 50) {
            for poly in [&f, &g, &h] {
                assert!(poly.dimension() <= 2);
                assert!(poly.degree() <= 6);
                assert!(poly.len() <= 4);
            }
        }
    }
}
