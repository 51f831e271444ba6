//! Certified classification of polynomial root moduli relative to the unit
//! circle, fully exact: Sturm counting for the on-circle part (after the
//! Chebyshev-style substitution `w = x + 1/x`) and a Cauchy-index
//! Routh-Hurwitz count for the open disk (after a Mobius transform).

use super::poly::{cauchy_index_line, QPoly};
use crate::error::{Error, Result};
use crate::Rat;
use num_traits::Zero;

/// Root tallies of a polynomial relative to the unit circle, counted with
/// multiplicity. `certified` is always true for this exact pipeline; the
/// field is part of the stable API so callers need not care how the counts
/// were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct RootModuli {
    pub count_lt1: usize,
    pub count_eq1: usize,
    pub count_gt1: usize,
    pub certified: bool,
}

/// Classify all complex roots of `p` by modulus `<1`, `=1`, `>1`, with
/// multiplicity. Roots at zero count as modulus `<1`.
pub fn classify_root_moduli(p: &QPoly) -> Result<RootModuli> {
    if p.is_zero() {
        return Err(Error::DomainError(
            "cannot classify roots of the zero polynomial".into(),
        ));
    }
    let (zeros, q) = strip_zero_roots(p);
    let mut lt = zeros;
    let mut eq = 0usize;
    let mut gt = 0usize;
    for (f, mult) in q.squarefree_decomposition() {
        let (i, o, u) = circle_analysis(&f);
        lt += mult * i;
        eq += mult * o;
        gt += mult * u;
    }
    Ok(RootModuli {
        count_lt1: lt,
        count_eq1: eq,
        count_gt1: gt,
        certified: true,
    })
}

/// Try to factor `p` (made monic) as `p_circ * p_off` where every root of
/// `p_circ` has modulus exactly 1 and no root of `p_off` does. Returns `None`
/// when the on-circle roots cannot be separated as an exact rational factor
/// (a square-free self-inversive part mixes on- and off-circle roots).
pub fn circle_split(p: &QPoly) -> Option<(QPoly, QPoly)> {
    assert!(!p.is_zero());
    let mut circ = QPoly::one();
    for (f, mult) in p.squarefree_decomposition() {
        // A square-free factor may carry a single root at zero; peel the x
        // off to the off-circle side before analysing the rest.
        let f = if f.coeffs[0].is_zero() {
            QPoly::new(f.coeffs[1..].to_vec())
        } else {
            f
        };
        if f.is_constant() {
            continue;
        }
        let g = circle_part(&f)?;
        for _ in 0..mult {
            circ = circ.mul(&g);
        }
    }
    let off = p.monic().div_exact(&circ);
    Some((circ, off))
}

/// For a square-free `f` with `f(0) != 0`: the monic factor carrying exactly
/// the on-circle roots, or `None` if they do not separate.
fn circle_part(f: &QPoly) -> Option<QPoly> {
    let mut rest = f.monic();
    let mut circ = QPoly::one();
    // Roots at +-1 are rational and always separable; peel them first.
    for r in [1i64, -1] {
        if rest.eval(&Rat::from_integer(r.into())).is_zero() {
            let lin = QPoly::from_i64(&[-r, 1]);
            rest = rest.div_exact(&lin);
            circ = circ.mul(&lin);
        }
    }
    let g = rest.gcd(&rest.reverse());
    if g.is_constant() {
        return Some(circ);
    }
    let on = on_circle_count(&g);
    if on == g.degree() {
        Some(circ.mul(&g))
    } else if on == 0 {
        Some(circ)
    } else {
        None
    }
}

fn strip_zero_roots(p: &QPoly) -> (usize, QPoly) {
    let k = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    (k, QPoly::new(p.coeffs[k..].to_vec()))
}

/// `(inside, on, outside)` tallies for a square-free `f` with `f(0) != 0`.
fn circle_analysis(f: &QPoly) -> (usize, usize, usize) {
    let f = f.monic();
    let g = f.gcd(&f.reverse());
    let on = on_circle_count(&g);
    // Off-circle roots of g come in reciprocal pairs straddling the circle.
    let off_g = g.degree() - on;
    debug_assert_eq!(off_g % 2, 0);
    let q = f.div_exact(&g);
    let inside_q = count_inside_no_circle(&q);
    (
        off_g / 2 + inside_q,
        on,
        off_g / 2 + (q.degree() - inside_q),
    )
}

/// Number of roots of modulus 1 of a square-free polynomial `g` whose root
/// multiset is closed under `z -> 1/z` (e.g. `g = gcd(f, reverse(f))`) and
/// with `g(0) != 0`.
fn on_circle_count(g: &QPoly) -> usize {
    let mut g1 = g.monic();
    let mut on = 0usize;
    for r in [1i64, -1] {
        if g1.eval(&Rat::from_integer(r.into())).is_zero() {
            g1 = g1.div_exact(&QPoly::from_i64(&[-r, 1]));
            on += 1;
        }
    }
    if g1.is_constant() {
        return on;
    }
    // With +-1 removed and roots in reciprocal pairs, the constant term is
    // the product of the root pairs, i.e. 1, so g1 is genuinely palindromic.
    debug_assert_eq!(g1.degree() % 2, 0);
    debug_assert_eq!(g1, g1.reverse());
    let m = g1.degree() / 2;
    // Substitute w = x + 1/x: x^k + x^-k = P_k(w) with P_0 = 2, P_1 = w,
    // P_k = w P_{k-1} - P_{k-2}. A conjugate pair e^{+-i t} on the circle
    // corresponds to one real root w = 2 cos t in (-2, 2).
    let w = QPoly::x();
    let mut p_prev = QPoly::constant(Rat::from_integer(2.into()));
    let mut p_cur = w.clone();
    let mut h = QPoly::constant(g1.coeffs[m].clone());
    for k in 1..=m {
        h = h.add(&p_cur.scale(&g1.coeffs[m + k]));
        if k < m {
            let next = w.mul(&p_cur).sub(&p_prev);
            p_prev = p_cur;
            p_cur = next;
        }
    }
    debug_assert_eq!(h.degree(), m);
    // Distinct reciprocal pairs map to distinct w, so h is square-free; the
    // gcd pass is a cheap belt-and-braces normalization.
    let h_sf = h.div_exact(&h.gcd(&h.derivative()));
    let two = Rat::from_integer(2.into());
    debug_assert!(!h_sf.eval(&two).is_zero() && !h_sf.eval(&(-two.clone())).is_zero());
    on + 2 * h_sf.count_real_roots_in(&-two.clone(), &two)
}

/// Number of roots in the open unit disk of a polynomial `q` with no roots of
/// modulus 1 (so in particular `q(+-1) != 0`). Mobius transform
/// `z = (1+w)/(1-w)` maps `|z| < 1` to `Re w < 0`; the left-half-plane count
/// comes from the Cauchy index of the Routh pair.
fn count_inside_no_circle(q: &QPoly) -> usize {
    let n = q.degree();
    if n == 0 {
        return 0;
    }
    // f_w(w) = (1-w)^n q((1+w)/(1-w)); no degree drop since q(-1) != 0.
    let one_plus = QPoly::from_i64(&[1, 1]);
    let one_minus = QPoly::from_i64(&[1, -1]);
    let mut plus_pows = vec![QPoly::one()];
    let mut minus_pows = vec![QPoly::one()];
    for j in 1..=n {
        plus_pows.push(plus_pows[j - 1].mul(&one_plus));
        minus_pows.push(minus_pows[j - 1].mul(&one_minus));
    }
    let mut fw = QPoly::zero();
    for (j, a) in q.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        fw = fw.add(&plus_pows[j].mul(&minus_pows[n - j]).scale(a));
    }
    debug_assert_eq!(fw.degree(), n);
    // Descending coefficients a0..an; Routh pair
    //   F0(y) = a0 y^n - a2 y^(n-2) + a4 y^(n-4) - ...
    //   F1(y) = a1 y^(n-1) - a3 y^(n-3) + ...
    // Then #LHP = (n + I(F1/F0)) / 2.
    let desc: Vec<Rat> = fw.coeffs.iter().rev().cloned().collect();
    let mut f0 = vec![Rat::zero(); n + 1];
    let mut f1 = vec![Rat::zero(); n + 1];
    for (k, a) in desc.iter().enumerate() {
        let deg = n - k;
        let signed = if (k / 2) % 2 == 0 { a.clone() } else { -a.clone() };
        if k % 2 == 0 {
            f0[deg] = signed;
        } else {
            f1[deg] = signed;
        }
    }
    let idx = cauchy_index_line(&QPoly::new(f0), &QPoly::new(f1));
    let lhp = n as isize + idx;
    debug_assert_eq!(lhp % 2, 0, "parity break: root on the unit circle?");
    (lhp / 2) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn tallies(p: &QPoly) -> (usize, usize, usize) {
        let r = classify_root_moduli(p).unwrap();
        assert!(r.certified);
        (r.count_lt1, r.count_eq1, r.count_gt1)
    }

    #[test]
    fn linear_outside() {
        assert_eq!(tallies(&QPoly::from_i64(&[-2, 1])), (0, 0, 1));
    }

    #[test]
    fn repeated_root_one() {
        // x^2 - 2x + 1 = (x-1)^2
        assert_eq!(tallies(&QPoly::from_i64(&[1, -2, 1])), (0, 2, 0));
    }

    #[test]
    fn golden_reciprocal_pair() {
        // x^2 - 3x + 1: roots (3 +- sqrt 5)/2, reciprocal pair off circle
        assert_eq!(tallies(&QPoly::from_i64(&[1, -3, 1])), (1, 0, 1));
    }

    #[test]
    fn imaginary_units() {
        assert_eq!(tallies(&QPoly::from_i64(&[1, 0, 1])), (0, 2, 0));
    }

    #[test]
    fn cyclotomic_sixth() {
        assert_eq!(tallies(&QPoly::from_i64(&[1, -1, 1])), (0, 2, 0));
    }

    #[test]
    fn fibonacci_poly() {
        // x^2 - x - 1: roots phi and -1/phi
        assert_eq!(tallies(&QPoly::from_i64(&[-1, -1, 1])), (1, 0, 1));
    }

    #[test]
    fn reciprocal_pair_real() {
        // (x-2)(x-1/2) = x^2 - 5/2 x + 1: self-inversive yet off circle
        let p = QPoly::new(vec![
            Rat::one(),
            Rat::new((-5).into(), 2.into()),
            Rat::one(),
        ]);
        assert_eq!(tallies(&p), (1, 0, 1));
    }

    #[test]
    fn zero_roots_count_inside() {
        // x^2 (x - 2)
        let p = QPoly::from_i64(&[0, 0, -2, 1]);
        assert_eq!(tallies(&p), (2, 0, 1));
    }

    #[test]
    fn repeated_outside() {
        let p = QPoly::from_i64(&[-2, 1]);
        assert_eq!(tallies(&p.mul(&p)), (0, 0, 2));
    }

    #[test]
    fn tallies_multiplicative_over_pool() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        // Pool of factors with known tallies.
        let pool: Vec<(QPoly, (usize, usize, usize))> = vec![
            (QPoly::from_i64(&[-2, 1]), (0, 0, 1)),
            (QPoly::from_i64(&[1, 3]), (1, 0, 0)), // 3x + 1, root -1/3
            (QPoly::from_i64(&[1, -3, 1]), (1, 0, 1)),
            (QPoly::from_i64(&[1, 0, 1]), (0, 2, 0)),
            (QPoly::from_i64(&[1, 1, 1]), (0, 2, 0)),
            (QPoly::from_i64(&[-1, 1]), (0, 1, 0)),
            (QPoly::from_i64(&[0, 1]), (1, 0, 0)), // x
            (QPoly::from_i64(&[-1, -1, 1]), (1, 0, 1)),
        ];
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..60 {
            let k = rng.gen_range(1..=4);
            let mut p = QPoly::one();
            let mut want = (0, 0, 0);
            for _ in 0..k {
                let (f, t) = &pool[rng.gen_range(0..pool.len())];
                p = p.mul(f);
                want = (want.0 + t.0, want.1 + t.1, want.2 + t.2);
            }
            assert_eq!(tallies(&p), want, "product tallies for {p}");
        }
    }

    #[test]
    fn circle_split_pure_off() {
        let p = QPoly::from_i64(&[1, -3, 1]);
        let (c, o) = circle_split(&p).unwrap();
        assert_eq!(c, QPoly::one());
        assert_eq!(o, p.monic());
    }

    #[test]
    fn circle_split_mixed_factors() {
        // (x^2 + 1)(x - 2)
        let p = QPoly::from_i64(&[1, 0, 1]).mul(&QPoly::from_i64(&[-2, 1]));
        let (c, o) = circle_split(&p).unwrap();
        assert_eq!(c, QPoly::from_i64(&[1, 0, 1]));
        assert_eq!(o, QPoly::from_i64(&[-2, 1]));
    }

    #[test]
    fn circle_split_repeated_unipotent() {
        // (x-1)^2, the Heisenberg characteristic polynomial
        let p = QPoly::from_i64(&[1, -2, 1]);
        let (c, o) = circle_split(&p).unwrap();
        assert_eq!(c, p);
        assert_eq!(o, QPoly::one());
    }

    #[test]
    fn circle_split_peels_rational_circle_roots() {
        // (x-3)(x-1/3)(x+1): the root -1 separates, the reciprocal pair goes
        // to the off-circle side.
        let p = QPoly::from_i64(&[-3, 1])
            .mul(&QPoly::new(vec![
                Rat::new((-1).into(), 3.into()),
                Rat::one(),
            ]))
            .mul(&QPoly::from_i64(&[1, 1]));
        let (c, _) = circle_split(&p).unwrap();
        assert_eq!(c, QPoly::from_i64(&[1, 1]));
    }

    #[test]
    fn circle_split_inseparable_salem_like() {
        // x^4 - 3x^3 + 3x^2 - 3x + 1: palindromic, one conjugate pair on the
        // circle and one real reciprocal pair off it, irreducible over the
        // reach of this splitter.
        let p = QPoly::from_i64(&[1, -3, 3, -3, 1]);
        assert_eq!(tallies(&p), (1, 2, 1));
        assert!(circle_split(&p).is_none());
    }

    #[test]
    fn zero_poly_rejected() {
        assert!(classify_root_moduli(&QPoly::zero()).is_err());
    }
}
