use super::matrix::QMat;
use crate::Rat;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense univariate polynomial over the rationals, coefficients ascending.
/// The zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    pub coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        QPoly::new(vec![c])
    }

    pub fn x() -> Self {
        QPoly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QPoly::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> &Rat {
        self.coeffs.last().expect("lead of zero polynomial")
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let inv = self.lead().recip();
        self.scale(&inv)
    }

    pub fn scale(&self, s: &Rat) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        QPoly::new(out)
    }

    pub fn sub(&self, rhs: &QPoly) -> QPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    pub fn divrem(&self, rhs: &QPoly) -> (QPoly, QPoly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dr = rhs.degree();
        if self.is_zero() || self.degree() < dr {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); self.degree() - dr + 1];
        let lead_inv = rhs.lead().recip();
        for k in (dr..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] * &lead_inv;
            quot[k - dr] = q.clone();
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let sub = &q * b;
                rem[k - dr + j] -= sub;
            }
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn div_exact(&self, rhs: &QPoly) -> QPoly {
        let (q, r) = self.divrem(rhs);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    /// Evaluate the polynomial at a square matrix.
    pub fn eval_matrix(&self, a: &QMat) -> QMat {
        let n = a.n;
        let mut acc = QMat::identity(n).scale(&Rat::zero());
        for c in self.coeffs.iter().rev() {
            acc = a.mul(&acc);
            for i in 0..n {
                acc[(i, i)] += c.clone();
            }
        }
        acc
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, rhs: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Reciprocal polynomial `x^deg * p(1/x)` (coefficients reversed).
    pub fn reverse(&self) -> QPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        QPoly::new(c)
    }

    /// Yun's square-free decomposition: returns `(factor, multiplicity)`
    /// pairs with the factors monic, square-free and pairwise coprime, whose
    /// weighted product reproduces `self` up to the leading coefficient.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        assert!(!self.is_zero());
        let p = self.monic();
        if p.is_constant() {
            return vec![];
        }
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.div_exact(&a0);
        let mut c = dp.div_exact(&a0);
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1usize;
        while !b.is_constant() {
            let f = b.gcd(&d);
            if !f.is_constant() {
                out.push((f.clone(), i));
            }
            b = b.div_exact(&f);
            c = d.div_exact(&f);
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Number of distinct real roots in the open interval `(a, b)`.
    /// Requires a square-free polynomial not vanishing at the endpoints.
    pub fn count_real_roots_in(&self, a: &Rat, b: &Rat) -> usize {
        assert!(!self.is_zero());
        assert!(!self.eval(a).is_zero() && !self.eval(b).is_zero());
        let chain = sturm_chain(self, &self.derivative());
        let va = variations(chain.iter().map(|p| sign(&p.eval(a))));
        let vb = variations(chain.iter().map(|p| sign(&p.eval(b))));
        va - vb
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

fn sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
    let mut count = 0;
    let mut last: Option<i8> = None;
    for s in signs {
        if s == 0 {
            continue;
        }
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Signed (negated) remainder sequence starting from `(f0, f1)`.
fn sturm_chain(f0: &QPoly, f1: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![f0.clone()];
    if f1.is_zero() {
        return chain;
    }
    chain.push(f1.clone());
    loop {
        let k = chain.len();
        let (_, r) = chain[k - 2].divrem(&chain[k - 1]);
        if r.is_zero() {
            return chain;
        }
        chain.push(r.neg());
    }
}

fn sign_at_plus_inf(p: &QPoly) -> i8 {
    sign(p.lead())
}

fn sign_at_minus_inf(p: &QPoly) -> i8 {
    let s = sign(p.lead());
    if p.degree() % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Cauchy index of the rational function `f1/f0` over the whole real line,
/// computed through the signed remainder sequence.
pub fn cauchy_index_line(f0: &QPoly, f1: &QPoly) -> isize {
    if f0.is_zero() || f1.is_zero() {
        return 0;
    }
    let chain = sturm_chain(f0, f1);
    let vm = variations(chain.iter().map(sign_at_minus_inf)) as isize;
    let vp = variations(chain.iter().map(sign_at_plus_inf)) as isize;
    vm - vp
}

/// Exact monic characteristic polynomial of a square rational matrix via the
/// Faddeev-LeVerrier recursion (all divisions are by small integers, so the
/// intermediate bit growth stays controlled).
pub fn char_poly(a: &QMat) -> QPoly {
    let n = a.n;
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = QMat::identity(n).scale(&Rat::zero());
    let mut c = Rat::one();
    for k in 1..=n {
        // M_k = A * (M_{k-1} + c_{n-k+1} I)
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] += c.clone();
        }
        m = a.mul(&shifted);
        c = -(m.trace() / Rat::from_integer(k.into()));
        coeffs[n - k] = c.clone();
    }
    QPoly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::IMat;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn char_poly_identity_2x2() {
        let p = char_poly(&IMat::identity(2).to_qmat());
        assert_eq!(p, QPoly::from_i64(&[1, -2, 1]));
    }

    #[test]
    fn char_poly_unipotent() {
        let m = IMat::from_i64(&[&[1, 1], &[0, 1]]).to_qmat();
        assert_eq!(char_poly(&m), QPoly::from_i64(&[1, -2, 1]));
    }

    #[test]
    fn char_poly_scalar() {
        let m = IMat::from_i64(&[&[2]]).to_qmat();
        assert_eq!(char_poly(&m), QPoly::from_i64(&[-2, 1]));
    }

    #[test]
    fn char_poly_similarity_invariant_randomized() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        let mut done = 0;
        while done < 40 {
            let n = rng.gen_range(1..=3);
            let mk = |rng: &mut StdRng| {
                IMat::from_rows(
                    (0..n)
                        .map(|_| {
                            (0..n).map(|_| crate::Int::from(rng.gen_range(-3i64..=3))).collect()
                        })
                        .collect(),
                )
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            if a.det().is_zero() {
                continue;
            }
            let aq = a.to_qmat();
            let conj = aq.mul(&b.to_qmat()).mul(&aq.inverse().unwrap());
            assert_eq!(char_poly(&conj), char_poly(&b.to_qmat()));
            done += 1;
        }
    }

    #[test]
    fn divrem_roundtrip() {
        let p = QPoly::from_i64(&[1, 0, -3, 2, 5]);
        let d = QPoly::from_i64(&[2, 1, 1]);
        let (q, r) = p.divrem(&d);
        assert_eq!(q.mul(&d).add(&r), p);
        assert!(r.degree() < d.degree());
    }

    #[test]
    fn gcd_of_product() {
        let a = QPoly::from_i64(&[-1, 1]); // x - 1
        let b = QPoly::from_i64(&[2, 1]); // x + 2
        let p = a.mul(&b);
        let q = a.mul(&QPoly::from_i64(&[5, 1]));
        assert_eq!(p.gcd(&q), a.monic());
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        // (x-1)^2 * (x+3)
        let p = QPoly::from_i64(&[-1, 1])
            .mul(&QPoly::from_i64(&[-1, 1]))
            .mul(&QPoly::from_i64(&[3, 1]));
        let parts = p.squarefree_decomposition();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (QPoly::from_i64(&[3, 1]), 1));
        assert_eq!(parts[1], (QPoly::from_i64(&[-1, 1]), 2));
    }

    #[test]
    fn sturm_counts_roots() {
        // x^2 - 2: roots ±sqrt(2)
        let p = QPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.count_real_roots_in(&rat(0, 1), &rat(2, 1)), 1);
        assert_eq!(p.count_real_roots_in(&rat(-2, 1), &rat(2, 1)), 2);
        assert_eq!(p.count_real_roots_in(&rat(2, 1), &rat(3, 1)), 0);
    }

    #[test]
    fn cauchy_index_simple_pole() {
        // I(1/y) over R = +1
        assert_eq!(cauchy_index_line(&QPoly::x(), &QPoly::one()), 1);
        // I(-1/y) = -1
        assert_eq!(cauchy_index_line(&QPoly::x(), &QPoly::from_i64(&[-1])), -1);
    }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of approximations for extreme magnitudes.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}
