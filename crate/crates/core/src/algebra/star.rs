//! The Moyal star product and the brackets built from it.
//!
//! For polynomials the exponential series
//!
//! ```text
//! f * g = sum_k (i hbar / N)^k / k! . Pi^k(f, g),
//! Pi = sum_i (<d_Qi d_Pi> - <d_Pi d_Qi>)
//! ```
//!
//! is finite. `Pi^k` is expanded with multinomial coefficients over the
//! `2d` commuting operators `<d_Qi d_Pi>` and `<d_Pi d_Qi>`; the `1/k!`
//! cancels against the multinomial `k!`, leaving `1 / prod(a_i! b_i!)` for
//! `a_i` applications of the first kind and `b_i` of the second. Applied to
//! a pair of monomials the result depends only on `s_i = a_i + b_i`, so
//! every `(a, b)` split is summed as an integer before any rational
//! arithmetic happens.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::multi_index::{MultiIndex, Variable};
use super::polynomial::{
    check_same_dimension, imaginary_unit, partial_derivative, poly_mul, poly_sub,
    rational_from_f64, Coefficient, PhasePolynomial,
};
use super::AlgebraError;

/// Scale of the noncommutativity: the constant `N` in `i hbar / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noncommutativity {
    Finite(f64),
    /// `N -> infinity`: the star product collapses to the pointwise product.
    FreeField,
}

/// Whether `hbar` is kept as a formal grading or substituted by a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HbarTreatment {
    Symbolic,
    Numeric(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParameter {
    scale: Noncommutativity,
    hbar: HbarTreatment,
}

impl DeformationParameter {
    pub fn new(n: f64) -> Result<Self, AlgebraError> {
        if !n.is_finite() || n <= 0.0 {
            return Err(AlgebraError::InvalidDeformation(n));
        }
        Ok(DeformationParameter {
            scale: Noncommutativity::Finite(n),
            hbar: HbarTreatment::Symbolic,
        })
    }

    /// `N = 2`, the value that reproduces `[Q, P] = i hbar`.
    pub fn physical() -> Self {
        DeformationParameter::new(2.0).expect("2 is a valid N")
    }

    pub fn free_field() -> Self {
        DeformationParameter {
            scale: Noncommutativity::FreeField,
            hbar: HbarTreatment::Symbolic,
        }
    }

    pub fn with_numeric_hbar(self, hbar: f64) -> Result<Self, AlgebraError> {
        if !hbar.is_finite() || hbar < 0.0 {
            return Err(AlgebraError::InvalidHbar(hbar));
        }
        Ok(DeformationParameter {
            hbar: HbarTreatment::Numeric(hbar),
            ..self
        })
    }

    pub fn symbolic(self) -> Self {
        DeformationParameter {
            hbar: HbarTreatment::Symbolic,
            ..self
        }
    }

    pub fn scale(&self) -> Noncommutativity {
        self.scale
    }

    pub fn hbar(&self) -> HbarTreatment {
        self.hbar
    }

    /// `N`, or `None` in the free-field limit.
    pub fn n(&self) -> Option<f64> {
        match self.scale {
            Noncommutativity::Finite(n) => Some(n),
            Noncommutativity::FreeField => None,
        }
    }

    pub fn is_free_field(&self) -> bool {
        self.scale == Noncommutativity::FreeField
    }

    /// `(i / N)^k`, times `hbar^k` when `hbar` is numeric, for `k <= max`.
    fn order_factors(&self, max: u32) -> Result<Vec<Coefficient>, AlgebraError> {
        let n = match self.scale {
            Noncommutativity::Finite(n) => n,
            Noncommutativity::FreeField => return Ok(vec![Coefficient::one()]),
        };
        let mut step = imaginary_unit().unscale(rational_from_f64(n)?);
        if let HbarTreatment::Numeric(h) = self.hbar {
            step = step.scale(rational_from_f64(h)?);
        }
        let mut out = Vec::with_capacity(max as usize + 1);
        let mut acc = Coefficient::one();
        for _ in 0..=max {
            out.push(acc.clone());
            acc *= &step;
        }
        Ok(out)
    }

    fn grades_hbar(&self) -> bool {
        self.hbar == HbarTreatment::Symbolic
    }
}

impl Default for DeformationParameter {
    fn default() -> Self {
        DeformationParameter::physical()
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for j in 0..k {
        r = r * (n - j) / (j + 1);
    }
    r
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * (n - j))
}

/// Integer weights `W[s]` for one index pair, summed over `a + b = s`:
/// `C(qL, a) (pR)_a . C(pL, b) (qR)_b . (-1)^b`.
fn pair_weights(q_left: u32, p_left: u32, q_right: u32, p_right: u32) -> Vec<BigInt> {
    let a_max = q_left.min(p_right);
    let b_max = p_left.min(q_right);
    let mut w = vec![BigInt::zero(); (a_max + b_max + 1) as usize];
    for a in 0..=a_max {
        let wa = binomial(q_left, a) * falling(p_right, a);
        for b in 0..=b_max {
            let wb = binomial(p_left, b) * falling(q_right, b);
            let term = &wa * wb;
            if b % 2 == 0 {
                w[(a + b) as usize] += term;
            } else {
                w[(a + b) as usize] -= term;
            }
        }
    }
    w
}

fn star_up_to(
    f: &PhasePolynomial,
    g: &PhasePolynomial,
    param: &DeformationParameter,
    max_order: Option<u32>,
) -> Result<PhasePolynomial, AlgebraError> {
    check_same_dimension(f, g)?;
    let d = f.dimension();
    let natural = f.degree().min(g.degree());
    let cap = match param.scale {
        Noncommutativity::FreeField => 0,
        Noncommutativity::Finite(_) => max_order.map_or(natural, |m| m.min(natural)),
    };
    let factors = param.order_factors(cap)?;
    let grade = param.grades_hbar();

    let mut out = PhasePolynomial::zero(d);
    let mut weights: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    let mut s = vec![0u32; d];
    for (ma, ca) in f.terms() {
        for (mb, cb) in g.terms() {
            let base = ca * cb;
            weights.clear();
            for i in 0..d {
                weights.push(pair_weights(
                    ma.exponent(Variable::Q(i)),
                    ma.exponent(Variable::P(i)),
                    mb.exponent(Variable::Q(i)),
                    mb.exponent(Variable::P(i)),
                ));
            }
            s.iter_mut().for_each(|x| *x = 0);
            // odometer over s in prod_i [0, len(W_i))
            'outer: loop {
                let k: u32 = s.iter().sum();
                if k <= cap {
                    let mut w = BigInt::one();
                    for (i, &si) in s.iter().enumerate() {
                        w *= &weights[i][si as usize];
                        if w.is_zero() {
                            break;
                        }
                    }
                    if !w.is_zero() {
                        let q = (0..d)
                            .map(|i| ma.q_exponents()[i] + mb.q_exponents()[i] - s[i])
                            .collect();
                        let p = (0..d)
                            .map(|i| ma.p_exponents()[i] + mb.p_exponents()[i] - s[i])
                            .collect();
                        let hbar = ma.hbar_power() + mb.hbar_power() + if grade { k } else { 0 };
                        let coef = (&base * &factors[k as usize]).scale(BigRational::from_integer(w));
                        out.add_term(MultiIndex::new(q, p, hbar), coef);
                    }
                }
                for i in 0..d {
                    s[i] += 1;
                    if (s[i] as usize) < weights[i].len() {
                        continue 'outer;
                    }
                    s[i] = 0;
                }
                break;
            }
        }
    }
    Ok(out)
}

/// Full Moyal product `f * g`. The order-0 part equals `poly_mul(f, g)`.
pub fn star_product(
    f: &PhasePolynomial,
    g: &PhasePolynomial,
    param: &DeformationParameter,
) -> Result<PhasePolynomial, AlgebraError> {
    star_up_to(f, g, param, None)
}

/// The product truncated after the first-order bidifferential term.
pub fn star_truncated_first_order(
    f: &PhasePolynomial,
    g: &PhasePolynomial,
    param: &DeformationParameter,
) -> Result<PhasePolynomial, AlgebraError> {
    star_up_to(f, g, param, Some(1))
}

/// `f * g - g * f`.
pub fn star_commutator(
    f: &PhasePolynomial,
    g: &PhasePolynomial,
    param: &DeformationParameter,
) -> Result<PhasePolynomial, AlgebraError> {
    poly_sub(&star_product(f, g, param)?, &star_product(g, f, param)?)
}

pub fn poisson_bracket(
    f: &PhasePolynomial,
    g: &PhasePolynomial,
) -> Result<PhasePolynomial, AlgebraError> {
    check_same_dimension(f, g)?;
    let mut out = PhasePolynomial::zero(f.dimension());
    for i in 0..f.dimension() {
        let qp = poly_mul(
            &partial_derivative(f, Variable::Q(i))?,
            &partial_derivative(g, Variable::P(i))?,
        )?;
        let pq = poly_mul(
            &partial_derivative(f, Variable::P(i))?,
            &partial_derivative(g, Variable::Q(i))?,
        )?;
        out = poly_sub(&super::poly_add(&out, &qp)?, &pq)?;
    }
    Ok(out)
}

/// `(f * g - g * f) / (2 i hbar / N)` with the `hbar` grading lowered by
/// one. Always computed with symbolic `hbar`; its `hbar^0` part is the
/// Poisson bracket.
pub fn classical_limit_check(
    f: &PhasePolynomial,
    g: &PhasePolynomial,
    param: &DeformationParameter,
) -> Result<PhasePolynomial, AlgebraError> {
    let n = param.n().ok_or(AlgebraError::FreeFieldLimit)?;
    let comm = star_commutator(f, g, &param.symbolic())?;
    // divide by 2i/N, i.e. multiply by N / (2i) = -i N / 2
    let factor = Coefficient::new(BigRational::zero(), -rational_from_f64(n)? / BigInt::from(2));
    let lowered = comm.map_indices(|m| {
        let h = m.hbar_power();
        debug_assert!(h >= 1, "commutator terms carry at least one hbar");
        m.clone().with_hbar_power(h.saturating_sub(1))
    });
    Ok(lowered.scale(&factor))
}
