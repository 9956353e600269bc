use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::multi_index::{MultiIndex, Variable};
use super::AlgebraError;

/// Exact complex-rational coefficient.
pub type Coefficient = Complex<BigRational>;

/// Converts a finite `f64` to the rational it represents exactly.
pub fn rational_from_f64(value: f64) -> Result<BigRational, AlgebraError> {
    BigRational::from_float(value).ok_or(AlgebraError::NonFinite(value))
}

pub fn coefficient_from_f64(re: f64, im: f64) -> Result<Coefficient, AlgebraError> {
    Ok(Complex::new(rational_from_f64(re)?, rational_from_f64(im)?))
}

pub fn coefficient_from_int(re: i64, im: i64) -> Coefficient {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

pub fn imaginary_unit() -> Coefficient {
    coefficient_from_int(0, 1)
}

pub fn coefficient_to_complex64(c: &Coefficient) -> Complex64 {
    Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im))
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Sparse polynomial in `Q_1..Q_d`, `P_1..P_d` and a formal `hbar`,
/// with exact complex-rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasePolynomial {
    dimension: usize,
    terms: BTreeMap<MultiIndex, Coefficient>,
}

impl PhasePolynomial {
    pub fn zero(dimension: usize) -> Self {
        assert!(dimension > 0, "phase space dimension must be positive");
        PhasePolynomial {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dimension: usize, c: Coefficient) -> Self {
        let mut p = PhasePolynomial::zero(dimension);
        p.add_term(MultiIndex::one(dimension), c);
        p
    }

    pub fn one(dimension: usize) -> Self {
        PhasePolynomial::constant(dimension, Coefficient::one())
    }

    pub fn variable(dimension: usize, var: Variable) -> Result<Self, AlgebraError> {
        check_index(var, dimension)?;
        let mut p = PhasePolynomial::zero(dimension);
        p.add_term(MultiIndex::variable(dimension, var), Coefficient::one());
        Ok(p)
    }

    /// The formal `hbar` as a polynomial.
    pub fn hbar(dimension: usize) -> Self {
        let mut p = PhasePolynomial::zero(dimension);
        p.add_term(MultiIndex::one(dimension).with_hbar_power(1), Coefficient::one());
        p
    }

    /// Builds a polynomial from `(index, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(dimension: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (MultiIndex, Coefficient)>,
    {
        let mut p = PhasePolynomial::zero(dimension);
        for (m, c) in terms {
            if m.dimension() != dimension {
                return Err(AlgebraError::DimensionMismatch {
                    left: dimension,
                    right: m.dimension(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_else(Coefficient::zero)
    }

    /// Highest phase-space degree over all terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn min_hbar_power(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::hbar_power).min()
    }

    pub fn max_hbar_power(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::hbar_power).max()
    }

    /// Terms of exactly the given `hbar` power, regraded to `hbar^0`.
    pub fn hbar_component(&self, power: u32) -> PhasePolynomial {
        let mut out = PhasePolynomial::zero(self.dimension);
        for (m, c) in &self.terms {
            if m.hbar_power() == power {
                out.add_term(m.clone().with_hbar_power(0), c.clone());
            }
        }
        out
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Coefficient) -> PhasePolynomial {
        let mut out = PhasePolynomial::zero(self.dimension);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn neg(&self) -> PhasePolynomial {
        PhasePolynomial {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    /// Adds `c * m` in place, pruning the term if it cancels.
    pub(crate) fn add_term(&mut self, m: MultiIndex, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn map_indices<F>(&self, mut f: F) -> PhasePolynomial
    where
        F: FnMut(&MultiIndex) -> MultiIndex,
    {
        let mut out = PhasePolynomial::zero(self.dimension);
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }
}

pub(crate) fn check_index(var: Variable, dimension: usize) -> Result<(), AlgebraError> {
    if var.index() >= dimension {
        return Err(AlgebraError::IndexOutOfRange {
            index: var.index(),
            dimension,
        });
    }
    Ok(())
}

pub(crate) fn check_same_dimension(
    f: &PhasePolynomial,
    g: &PhasePolynomial,
) -> Result<(), AlgebraError> {
    if f.dimension != g.dimension {
        return Err(AlgebraError::DimensionMismatch {
            left: f.dimension,
            right: g.dimension,
        });
    }
    Ok(())
}

pub fn poly_add(f: &PhasePolynomial, g: &PhasePolynomial) -> Result<PhasePolynomial, AlgebraError> {
    check_same_dimension(f, g)?;
    let mut out = f.clone();
    for (m, c) in &g.terms {
        out.add_term(m.clone(), c.clone());
    }
    Ok(out)
}

pub fn poly_sub(f: &PhasePolynomial, g: &PhasePolynomial) -> Result<PhasePolynomial, AlgebraError> {
    check_same_dimension(f, g)?;
    let mut out = f.clone();
    for (m, c) in &g.terms {
        out.add_term(m.clone(), -c);
    }
    Ok(out)
}

/// Commutative product; exponents and `hbar` powers add.
pub fn poly_mul(f: &PhasePolynomial, g: &PhasePolynomial) -> Result<PhasePolynomial, AlgebraError> {
    check_same_dimension(f, g)?;
    let mut out = PhasePolynomial::zero(f.dimension);
    for (ma, ca) in &f.terms {
        for (mb, cb) in &g.terms {
            out.add_term(ma.product(mb), ca * cb);
        }
    }
    Ok(out)
}

pub fn poly_pow(f: &PhasePolynomial, exponent: u32) -> PhasePolynomial {
    let mut result = PhasePolynomial::one(f.dimension);
    let mut base = f.clone();
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul(&result, &base).expect("same dimension");
        }
        e >>= 1;
        if e > 0 {
            base = poly_mul(&base, &base).expect("same dimension");
        }
    }
    result
}

pub fn partial_derivative(
    f: &PhasePolynomial,
    var: Variable,
) -> Result<PhasePolynomial, AlgebraError> {
    check_index(var, f.dimension)?;
    let mut out = PhasePolynomial::zero(f.dimension);
    for (m, c) in &f.terms {
        let e = m.exponent(var);
        if e == 0 {
            continue;
        }
        let mut dm = m.clone();
        dm.set_exponent(var, e - 1);
        out.add_term(dm, c * coefficient_from_int(i64::from(e), 0));
    }
    Ok(out)
}

/// Substitutes numeric values. `point` is `(q_1..q_d, p_1..p_d)`.
///
/// Evaluation runs in exact rational arithmetic and rounds once at the
/// end, so exactly-representable inputs give correctly rounded output.
pub fn evaluate(
    f: &PhasePolynomial,
    point: &[f64],
    hbar_value: f64,
) -> Result<Complex64, AlgebraError> {
    let d = f.dimension;
    if point.len() != 2 * d {
        return Err(AlgebraError::PointLength {
            expected: 2 * d,
            found: point.len(),
        });
    }
    if !hbar_value.is_finite() || hbar_value < 0.0 {
        return Err(AlgebraError::InvalidHbar(hbar_value));
    }
    let values = point
        .iter()
        .map(|&v| rational_from_f64(v))
        .collect::<Result<Vec<_>, _>>()?;
    let hbar = rational_from_f64(hbar_value)?;
    let mut acc = Coefficient::zero();
    for (m, c) in &f.terms {
        let mut w = num_traits::pow(hbar.clone(), m.hbar_power() as usize);
        for (i, &e) in m.q_exponents().iter().chain(m.p_exponents()).enumerate() {
            if e > 0 {
                w *= num_traits::pow(values[i].clone(), e as usize);
            }
        }
        acc += c.scale(w);
    }
    Ok(coefficient_to_complex64(&acc))
}

/// Shortest round-tripping decimal, switching to exponent form for very
/// large or small magnitudes.
pub fn format_real(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn monomial_factors(m: &MultiIndex) -> Vec<String> {
    let mut out = Vec::new();
    let d = m.dimension();
    let vars = (0..d).map(Variable::Q).chain((0..d).map(Variable::P));
    for var in vars {
        match m.exponent(var) {
            0 => {}
            1 => out.push(var.to_string()),
            e => out.push(format!("{var}^{e}")),
        }
    }
    match m.hbar_power() {
        0 => {}
        1 => out.push("hbar".to_string()),
        k => out.push(format!("hbar^{k}")),
    }
    out
}

/// Returns `(negative, rendered magnitude)`; the magnitude is empty when
/// it is a bare unit factor that can be dropped.
fn render_coefficient(c: &Coefficient, has_factors: bool) -> (bool, String) {
    let re = rational_to_f64(&c.re);
    let im = rational_to_f64(&c.im);
    if c.im.is_zero() {
        let mag = re.abs();
        let s = if mag == 1.0 && has_factors {
            String::new()
        } else {
            format_real(mag)
        };
        (re < 0.0, s)
    } else if c.re.is_zero() {
        let mag = im.abs();
        let s = if mag == 1.0 {
            "i".to_string()
        } else {
            format!("{}*i", format_real(mag))
        };
        (im < 0.0, s)
    } else {
        let sign = if im < 0.0 { '-' } else { '+' };
        (
            false,
            format!("({} {} {}*i)", format_real(re), sign, format_real(im.abs())),
        )
    }
}

impl fmt::Display for PhasePolynomial {
    /// Canonical rendering: terms in canonical order, `coefficient*q..*p..*hbar^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let factors = monomial_factors(m);
            let (negative, coef) = render_coefficient(c, !factors.is_empty());
            let mut parts = Vec::with_capacity(factors.len() + 1);
            if !coef.is_empty() {
                parts.push(coef);
            }
            parts.extend(factors);
            let body = parts.join("*");
            match (n, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: usize, i: usize) -> PhasePolynomial {
        PhasePolynomial::variable(d, Variable::Q(i)).unwrap()
    }
    fn p(d: usize, i: usize) -> PhasePolynomial {
        PhasePolynomial::variable(d, Variable::P(i)).unwrap()
    }
    fn c(re: i64, im: i64) -> Coefficient {
        coefficient_from_int(re, im)
    }

    #[test]
    fn add_disjoint_and_cancel() {
        let s = poly_add(&q(1, 0), &p(1, 0)).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_string(), "p1 + q1");
        assert!(poly_add(&q(1, 0), &q(1, 0).neg()).unwrap().is_zero());
    }

    #[test]
    fn add_complex_coefficients() {
        let a = poly_add(&q(1, 0).scale(&c(2, 0)), &p(1, 0).scale(&c(0, 1))).unwrap();
        let b = poly_sub(&q(1, 0), &p(1, 0).scale(&c(0, 1))).unwrap();
        assert_eq!(poly_add(&a, &b).unwrap(), q(1, 0).scale(&c(3, 0)));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = poly_add(&q(1, 0), &q(2, 1)).unwrap_err();
        assert_eq!(err, AlgebraError::DimensionMismatch { left: 1, right: 2 });
        assert!(poly_mul(&q(2, 0), &q(1, 0)).is_err());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(poly_mul(&q(1, 0), &p(1, 0)).unwrap().to_string(), "q1*p1");
        let sum = poly_add(&q(1, 0), &p(1, 0)).unwrap();
        let diff = poly_sub(&q(1, 0), &p(1, 0)).unwrap();
        assert_eq!(poly_mul(&sum, &diff).unwrap().to_string(), "-p1^2 + q1^2");
        let hq = poly_mul(&PhasePolynomial::hbar(1), &q(1, 0)).unwrap();
        let hp = poly_mul(&PhasePolynomial::hbar(1), &p(1, 0)).unwrap();
        assert_eq!(poly_mul(&hq, &hp).unwrap().to_string(), "q1*p1*hbar^2");
    }

    #[test]
    fn derivative_examples() {
        let q2p = poly_mul(&poly_pow(&q(1, 0), 2), &p(1, 0)).unwrap();
        let d = partial_derivative(&q2p, Variable::Q(0)).unwrap();
        assert_eq!(d, poly_mul(&q(1, 0), &p(1, 0)).unwrap().scale(&c(2, 0)));
        assert!(partial_derivative(&poly_pow(&q(1, 0), 2), Variable::P(0))
            .unwrap()
            .is_zero());
        let d3 = partial_derivative(&poly_pow(&q(1, 0), 3), Variable::Q(0)).unwrap();
        assert_eq!(d3, poly_pow(&q(1, 0), 2).scale(&c(3, 0)));
        assert_eq!(
            partial_derivative(&q(1, 0), Variable::P(1)).unwrap_err(),
            AlgebraError::IndexOutOfRange { index: 1, dimension: 1 }
        );
    }

    #[test]
    fn evaluate_examples() {
        let f = poly_add(
            &poly_mul(&q(1, 0), &p(1, 0)).unwrap(),
            &PhasePolynomial::hbar(1).scale(&coefficient_from_f64(0.0, 0.5).unwrap()),
        )
        .unwrap();
        assert_eq!(evaluate(&f, &[2.0, 3.0], 1.0).unwrap(), Complex64::new(6.0, 0.5));
        assert_eq!(
            evaluate(&PhasePolynomial::zero(2), &[1.0, 2.0, 3.0, 4.0], 1.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(matches!(
            evaluate(&f, &[1.0], 1.0),
            Err(AlgebraError::PointLength { expected: 2, found: 1 })
        ));
        assert!(evaluate(&f, &[1.0, 1.0], -1.0).is_err());
    }

    #[test]
    fn rendering_of_signs_and_units() {
        assert_eq!(PhasePolynomial::zero(1).to_string(), "0");
        assert_eq!(PhasePolynomial::one(1).to_string(), "1");
        assert_eq!(PhasePolynomial::one(1).neg().to_string(), "-1");
        assert_eq!(PhasePolynomial::hbar(1).scale(&c(0, 1)).to_string(), "i*hbar");
        assert_eq!(q(1, 0).scale(&c(0, -1)).to_string(), "-i*q1");
        assert_eq!(q(1, 0).scale(&c(1, -2)).to_string(), "(1 - 2*i)*q1");
        let tiny = PhasePolynomial::constant(1, coefficient_from_f64(1.054571817e-34, 0.0).unwrap());
        assert_eq!(tiny.to_string(), "1.054571817e-34");
    }
}
