//! Independent closed-form evaluators used to cross-check the numeric
//! pipeline. Nothing here touches the homotopy solver: roots come from a
//! small Aberth iteration, sums are explicit, and the lattice-point
//! formulas are exact integer arithmetic.

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::insertion::Insertion;
use crate::poly::{f64_to_bigint_exact, GeneratingPolynomial};
use crate::scalar::Scalar;
use crate::spec::ProblemSpec;

/// Evaluates a polynomial given low-to-high coefficients, returning the
/// value and derivative at `x`.
fn horner<S: Scalar>(coeffs: &[S], x: S) -> (S, S) {
    let mut p = S::zero();
    let mut dp = S::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All complex roots of a dense polynomial by the Aberth-Ehrlich iteration.
///
/// Coefficients are low-to-high; the leading coefficient must be nonzero.
/// Roots are refined to near machine precision but not deflated, so
/// clustered roots come back as-is and callers decide how close is too
/// close.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    assert!(deg >= 1 && coeffs[deg].norm() > 0.0);
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / coeffs[deg]).collect();

    // Cauchy-style initial radius, with irrational angle offset so the
    // start never sits on a symmetry axis of the root set.
    let radius = 1.0
        + monic[..deg]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / deg as f64 + 0.3964;
            radius * Complex64::new(theta.cos(), theta.sin())
        })
        .collect();

    for _ in 0..200 {
        let mut max_step = 0.0f64;
        let snapshot = z.clone();
        for i in 0..deg {
            let (p, dp) = horner(&monic, snapshot[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() > 0.0 { p / dp } else { p };
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &zj) in snapshot.iter().enumerate() {
                if j != i {
                    s += (snapshot[i] - zj).finv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    z
}

/// Newton-polishes a root of the polynomial with scalar-typed coefficients.
pub fn polish_root<S: Scalar>(coeffs: &[S], mut x: S) -> S {
    for _ in 0..6 {
        let (p, dp) = horner(coeffs, x);
        if dp.abs_f64() == 0.0 {
            break;
        }
        let step = p / dp;
        x = x - step;
        if step.abs_f64() < 1e-30 * (1.0 + x.abs_f64()) {
            break;
        }
    }
    x
}

/// Expands `prod_s (X - eps_s)` into low-to-high coefficients.
fn expand_from_roots<S: Scalar>(eps: &[S]) -> Vec<S> {
    let mut coeffs = vec![S::zero(); eps.len() + 1];
    coeffs[0] = S::one();
    let mut len = 1;
    for &e in eps {
        coeffs[len] = coeffs[len - 1];
        for i in (1..len).rev() {
            coeffs[i] = coeffs[i - 1] - e * coeffs[i];
        }
        coeffs[0] = -e * coeffs[0];
        len += 1;
    }
    coeffs
}

/// Elementary symmetric functions `e_0..e_t` of the given values.
pub fn elementary_symmetric<S: Scalar>(values: &[S]) -> Vec<S> {
    let mut e = vec![S::zero(); values.len() + 1];
    e[0] = S::one();
    for (idx, &v) in values.iter().enumerate() {
        for i in (1..=idx + 1).rev() {
            e[i] = e[i] + v * e[i - 1];
        }
    }
    e
}

/// Closed-form one-step evaluation: sums over unordered `r`-subsets of the
/// roots of `prod_s (X - eps_s) + (-1)^r q`.
///
/// `m[i-1]` is the exponent of the i-th elementary symmetric class,
/// `eps` is empty for the non-equivariant theory. Returns the full
/// generating-function value at the parameter `q`.
pub fn oracle_quot_k1<S: Scalar>(
    genus: u32,
    n: u32,
    r: u32,
    m: &[u32],
    q: S,
    eps: &[S],
) -> Result<S> {
    assert!(r >= 1 && r <= n);
    assert_eq!(m.len(), r as usize);
    let n = n as usize;
    let eps_vec: Vec<S> = if eps.is_empty() {
        vec![S::zero(); n]
    } else {
        assert_eq!(eps.len(), n);
        eps.to_vec()
    };

    let mut coeffs = expand_from_roots(&eps_vec);
    let sign = if r % 2 == 0 { S::one() } else { -S::one() };
    coeffs[0] = coeffs[0] + sign * q;

    let approx: Vec<Complex64> = coeffs.iter().map(|c| c.to_c64()).collect();
    let roots: Vec<S> = polynomial_roots(&approx)
        .into_iter()
        .map(|z| polish_root(&coeffs, S::from_c64(z)))
        .collect();

    let scale = 1.0 + roots.iter().map(|z| z.abs_f64()).fold(0.0, f64::max);
    let mut min_sep = f64::INFINITY;
    for a in 0..n {
        for b in a + 1..n {
            min_sep = min_sep.min((roots[a] - roots[b]).abs_f64());
        }
    }
    if min_sep < 1e-8 * scale {
        return Err(Error::RootsDegenerate { min_sep });
    }

    let mut total = S::zero();
    for subset in (0..n).combinations(r as usize) {
        let zeta: Vec<S> = subset.iter().map(|&i| roots[i]).collect();
        let e = elementary_symmetric(&zeta);
        let mut insertion_value = S::one();
        for (i, &mi) in m.iter().enumerate() {
            insertion_value = insertion_value * e[i + 1].powi(mi);
        }
        let mut j_factor = S::one();
        for (pos, &zi) in zeta.iter().enumerate() {
            let (_, dp) = horner(&coeffs, zi);
            let mut denom = S::one();
            for (t, &zt) in zeta.iter().enumerate() {
                if t != pos {
                    denom = denom * (zi - zt);
                }
            }
            j_factor = j_factor * (dp / denom);
        }
        let weighted = if genus == 0 {
            if j_factor.abs_f64() < 1e-12 {
                return Err(Error::JNearZero {
                    magnitude: j_factor.abs_f64(),
                });
            }
            insertion_value / j_factor
        } else {
            insertion_value * j_factor.powi(genus - 1)
        };
        total = total + weighted;
    }
    Ok(total)
}

/// Exact generating polynomial for the punctual tower (all ranks equal to
/// the ambient rank): only top classes survive, and each contributes the
/// fixed lattice polynomial `alpha_j`.
///
/// `m[i-1][j-1]` is the exponent of `c<i>[<j>]`; the result is independent
/// of the genus and bundle degree.
pub fn oracle_points(n: u32, k: usize, m: &[Vec<u32>]) -> GeneratingPolynomial {
    assert_eq!(m.len(), n as usize);
    for row in m {
        assert_eq!(row.len(), k);
    }
    for i in 0..(n as usize - 1) {
        if m[i].iter().any(|&e| e > 0) {
            return GeneratingPolynomial::zero(k);
        }
    }
    let mut result = GeneratingPolynomial::constant(k, BigInt::one());
    for j in 1..=k {
        let alpha = alpha_polynomial(k, j);
        result = result.mul(&alpha.pow(m[n as usize - 1][j - 1]));
    }
    result
}

/// `alpha_j = sum_{a=j}^{k} q_1 q_2 ... q_a`.
fn alpha_polynomial(k: usize, j: usize) -> GeneratingPolynomial {
    let mut p = GeneratingPolynomial::zero(k);
    for a in j..=k {
        let mut d = vec![0i64; k];
        for b in 0..a {
            d[b] = 1;
        }
        p.add_assign(d, &BigInt::one());
    }
    p
}

fn binomial_big(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact two-step generating polynomial for the rank chain `(1, n-1)` at
/// bundle degree zero.
///
/// `ell` is the exponent of `c1[1]`, `m[i-1]` the exponent of `c<i>[2]` for
/// `i = 1..n-1`. The sum collapses to a one-parameter binomial family; out
/// of range binomials and negative exponents contribute nothing.
pub fn oracle_two_step(genus: u32, n: u32, ell: u32, m: &[u32]) -> GeneratingPolynomial {
    assert!(n >= 2);
    assert_eq!(m.len(), n as usize - 1);
    let gbar = genus as i64 - 1;
    let nn = n as i64;
    let weighted: i64 = m
        .iter()
        .enumerate()
        .map(|(idx, &mi)| (idx as i64 + 1) * mi as i64)
        .sum();
    let numerator = ell as i64 + weighted + (2 * nn - 3) * gbar;
    if numerator.rem_euclid(nn - 1) != 0 {
        return GeneratingPolynomial::zero(2);
    }
    let d = numerator / (nn - 1);
    if d < 0 {
        return GeneratingPolynomial::zero(2);
    }

    let m_last = m[n as usize - 2] as i64;
    let top = d - gbar - m_last;
    let factor = BigInt::from(nn).pow(genus) * BigInt::from(nn - 1).pow(genus);

    let mut out = GeneratingPolynomial::zero(2);
    if top < 0 {
        return out;
    }
    // j n - ell - m_last + gbar must land in [0, top].
    let lo = ell as i64 + m_last - gbar;
    let j_min = div_ceil(lo, nn);
    let j_max = div_floor(lo + top, nn);
    for j in j_min..=j_max {
        let s = j * nn - lo;
        let a = gbar + j;
        let b = d - gbar - j;
        if a < 0 || b < 0 {
            continue;
        }
        let c = binomial_big(top, s);
        if !c.is_zero() {
            out.add_assign(vec![a, b], &(factor.clone() * c));
        }
    }
    out
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// The data of the maximal-subsheaf factorization: the scalar count split
/// off the last flag step, and the smaller problem that carries the rest.
#[derive(Clone, Debug)]
pub struct MaximalSubsheafSplit {
    /// Count of maximal subsheaves `m(n, e, r_k, g)`.
    pub factor: BigInt,
    /// The last-level degree pinned by the zero stage dimension.
    pub top_degree: i64,
    /// Remaining problem: ambient rank `r_k`, chain `r_1..r_{k-1}`,
    /// bundle degree `e - top_degree`.
    pub reduced: ProblemSpec,
    /// Insertion carried over to the reduced problem.
    pub reduced_insertion: Insertion,
}

/// Splits off the count of maximal subsheaves when the last stage has
/// relative dimension zero.
///
/// Requires genus at least 2 and an insertion not touching the last level;
/// the count itself is the one-step evaluation with `|e|` top classes
/// folded in, extracted from its single-degree support.
pub fn oracle_maximal_subsheaf_factor(
    spec: &ProblemSpec,
    insertion: &Insertion,
) -> Result<MaximalSubsheafSplit> {
    spec.validate()?;
    if spec.genus < 2 {
        return Err(Error::HypothesisNotMet(format!(
            "maximal-subsheaf factorization needs genus >= 2, got {}",
            spec.genus
        )));
    }
    let k = spec.num_steps();
    for t in &insertion.canonical().terms {
        for (p, _) in &t.powers {
            let level = match *p {
                crate::insertion::Primitive::ElemSym { level, .. } => level,
                crate::insertion::Primitive::EulerCross { level } => level,
            };
            if level as usize >= k {
                return Err(Error::HypothesisNotMet(
                    "insertion must not touch the last flag level".into(),
                ));
            }
        }
    }

    let r = *spec.ranks.last().unwrap() as i64;
    let n = spec.ambient_rank as i64;
    let g = spec.genus as i64;
    let e = spec.bundle_degree;
    // Zero stage dimension: ((1-g) r - e)(n - r) + n d_k = 0.
    let num = (g - 1) * r * (n - r) + e * (n - r);
    if n - r > 0 && num.rem_euclid(n) != 0 {
        return Err(Error::HypothesisNotMet(format!(
            "no integral degree makes the last stage zero-dimensional \
             (numerator {num} mod {n} != 0)"
        )));
    }
    let d_k = if n == r { 0 } else { num / n };
    if d_k < 0 {
        return Err(Error::HypothesisNotMet(format!(
            "zero-dimension degree {d_k} is negative"
        )));
    }

    let factor = maximal_count(n, e, r, spec.genus)?;

    let reduced = ProblemSpec::new(spec.genus, r as u32, spec.ranks[..k - 1].to_vec())
        .with_bundle_degree(e - d_k);
    Ok(MaximalSubsheafSplit {
        factor,
        top_degree: d_k,
        reduced,
        reduced_insertion: insertion.clone(),
    })
}

/// `m(n, e, r, g)`: the count of maximal rank-`r` subsheaves of a generic
/// rank-`n` degree-`e` bundle, via the one-step closed form.
fn maximal_count(n: i64, e: i64, r: i64, genus: u32) -> Result<BigInt> {
    use crate::dd::CDd;

    // Twisting by a point leaves the count unchanged; normalize e <= 0.
    let mut e0 = e;
    while e0 > 0 {
        e0 -= n;
    }
    let g = genus as i64;
    if n == r {
        // A full-rank subsheaf at stage dimension zero is the bundle itself.
        return Ok(BigInt::one());
    }
    let num = (g - 1) * r * (n - r) + e0 * (n - r);
    if num.rem_euclid(n) != 0 {
        return Err(Error::HypothesisNotMet(format!(
            "no integral zero-dimension degree for (n,e,r,g) = ({n},{e},{r},{genus})"
        )));
    }
    let d0 = num / n;
    if d0 < 0 {
        return Err(Error::HypothesisNotMet(format!(
            "zero-dimension degree {d0} negative for (n,e,r,g) = ({n},{e},{r},{genus})"
        )));
    }
    let mu = (-e0) as u32;
    let mut m = vec![0u32; r as usize];
    m[r as usize - 1] = mu;

    // Single-degree support: peel the coefficient at one generic parameter.
    let q = CDd::from_f64(0.9238795325112867, 0.3826834323650898);
    let value = oracle_quot_k1(genus, n as u32, r as u32, &m, q, &[])?;
    let degree = d0 + mu as i64;
    let coeff = value / q.powi(degree as u32);
    let re = coeff.to_c64().re;
    let rounded = re.round();
    let dist = ((re - rounded).abs().powi(2) + coeff.to_c64().im.powi(2)).sqrt();
    if dist > 1e-3 * (1.0 + rounded.abs()) {
        return Err(Error::RoundingUnsafe {
            degree: vec![degree],
            distance: dist,
        });
    }
    Ok(f64_to_bigint_exact(rounded))
}

/// Reference two-step solution built from radicals: `w` an n-th root of
/// `q1/q2`, `zeta` an (n-1)-th root of `q1 (1 + 1/w)`, and the `eta` block
/// the remaining roots of the level-2 equation after removing `-zeta/w`.
///
/// Returns `(w, zeta, etas)`; the Jacobian factor at such a solution is
/// `n (n-1) q2 w zeta^{n-2}`.
pub fn two_step_reference_solution(
    n: u32,
    q1: Complex64,
    q2: Complex64,
    w_index: u32,
    zeta_index: u32,
) -> (Complex64, Complex64, Vec<Complex64>) {
    assert!(n >= 3);
    let w = nth_root(q1 / q2, n, w_index);
    let zeta = nth_root(q1 * (Complex64::new(1.0, 0.0) + w.finv()), n - 1, zeta_index);
    let eta_missing = -zeta / w;
    let deg = (n - 1) as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
    for t in 0..=deg {
        // Coefficient of Y^{deg - t} is eta_missing^t.
        coeffs[deg - t] = eta_missing.powu(t as u32);
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    coeffs[0] += sign * q2;
    let etas = polynomial_roots(&coeffs)
        .into_iter()
        .map(|z| polish_root(&coeffs, z))
        .collect();
    (w, zeta, etas)
}

/// The `index`-th of the `n` complex n-th roots of `c`.
pub fn nth_root(c: Complex64, n: u32, index: u32) -> Complex64 {
    let r = c.norm().powf(1.0 / n as f64);
    let theta = (c.arg() + 2.0 * std::f64::consts::PI * (index % n) as f64) / n as f64;
    r * Complex64::new(theta.cos(), theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_from_terms;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn aberth_finds_roots_of_unity() {
        // X^4 - 1.
        let coeffs = vec![c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let mut roots = polynomial_roots(&coeffs);
        roots.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        for root in roots {
            assert!((root.powu(4) - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn projective_space_point_counts() {
        // Genus 0, r = 1: sum over roots of X^n = (-1)^{?} q of
        // zeta^{m} / (n zeta^{n-1}) gives q^d exactly when m = n-1 + n d.
        for n in 2..=4u32 {
            let q = c(0.7, 0.4);
            let v = oracle_quot_k1(0, n, 1, &[n - 1], q, &[]).unwrap();
            assert!((v - c(1.0, 0.0)).norm() < 1e-12, "n={n} gave {v}");
        }
        // P^1 with c1^{2d+1}: value q^d.
        for d in 0..=3u32 {
            let q = c(-0.3, 0.8);
            let v = oracle_quot_k1(0, 2, 1, &[2 * d + 1], q, &[]).unwrap();
            assert!((v - q.powu(d)).norm() < 1e-11 * (1.0 + q.powu(d).norm()));
        }
    }

    #[test]
    fn full_rank_subsheaves_reduce_to_top_class_products() {
        // r = n: single subset, J = 1, value = prod e_i(all roots)^{m_i};
        // for m = (0,..,0,m_n) this is ((-1)^{n+1} (-1)^n q)^{m_n}-free
        // check: e_n(roots) = (-1)^n * constant term = -(+-q).
        let q = c(0.6, -0.2);
        let v = oracle_quot_k1(1, 2, 2, &[0, 1], q, &[]).unwrap();
        // X^2 + q: e_2 = q, so the value is q itself (J = 1, genus drops out).
        assert!((v - q).norm() < 1e-12);
        let v5 = oracle_quot_k1(5, 2, 2, &[0, 1], q, &[]).unwrap();
        assert!((v - v5).norm() < 1e-12);
    }

    #[test]
    fn equivariant_one_step_recovers_schubert_value_at_q_zero_limit() {
        // At q -> 0 the roots approach eps and the genus-0 sum approaches
        // the equivariant localization of the flag integral; just validate
        // the roots stay distinct and the value is finite.
        let eps = [c(0.01, 0.0), c(0.005, 0.002), c(-0.008, 0.004)];
        let v = oracle_quot_k1(0, 3, 2, &[1, 1], c(0.3, 0.1), &eps).unwrap();
        assert!(v.norm().is_finite());
    }

    #[test]
    fn punctual_alpha_expansion() {
        // k = 2: alpha_1 = q1 + q1 q2.
        let p = oracle_points(2, 2, &[vec![0, 0], vec![1, 0]]);
        assert_eq!(p, poly_from_terms(2, &[(&[1, 0], 1), (&[1, 1], 1)]));
        // alpha_1^3 = q1^3 (1 + q2)^3.
        let p3 = oracle_points(2, 2, &[vec![0, 0], vec![3, 0]]);
        assert_eq!(
            p3,
            poly_from_terms(
                2,
                &[(&[3, 0], 1), (&[3, 1], 3), (&[3, 2], 3), (&[3, 3], 1)]
            )
        );
    }

    #[test]
    fn punctual_sub_top_classes_vanish() {
        let p = oracle_points(3, 2, &[vec![1, 0], vec![0, 0], vec![2, 1]]);
        assert!(p.is_zero());
    }

    #[test]
    fn punctual_three_levels() {
        // alpha_3 = q1 q2 q3 for k = 3.
        let p = oracle_points(2, 3, &[vec![0; 3], vec![0, 0, 2]]);
        assert_eq!(p, poly_from_terms(3, &[(&[2, 2, 2], 1)]));
    }

    #[test]
    fn two_step_small_case() {
        // Genus 0, n = 3, ell = 4, m = (1, 0): the polynomial 2 q1.
        let p = oracle_two_step(0, 3, 4, &[1, 0]);
        assert_eq!(p, poly_from_terms(2, &[(&[1, 0], 2)]));
    }

    #[test]
    fn two_step_genus_13_golden() {
        let p = oracle_two_step(13, 3, 0, &[0, 0]);
        let unit: i64 = 6i64.pow(13);
        assert_eq!(
            p,
            poly_from_terms(
                2,
                &[(&[10, 8], unit), (&[9, 9], 20 * unit), (&[8, 10], unit)]
            )
        );
    }

    #[test]
    fn two_step_non_integral_degree_gives_zero() {
        // Genus 0, n = 3: numerator = ell - 3 must be even.
        let p = oracle_two_step(0, 3, 4, &[0, 0]);
        assert!(p.is_zero());
    }

    #[test]
    fn two_step_negative_degree_gives_zero() {
        let p = oracle_two_step(0, 3, 1, &[0, 0]);
        assert!(p.is_zero());
    }

    #[test]
    fn maximal_subsheaf_golden_product() {
        // Genus 13, n = 3, ranks (1, 2): factor 3^13, reduced problem
        // (n = 2, r = (1), e = -8) whose own count is 2^13.
        let spec = ProblemSpec::new(13, 3, vec![1, 2]);
        let split = oracle_maximal_subsheaf_factor(&spec, &Insertion::one()).unwrap();
        assert_eq!(split.factor, BigInt::from(3i64.pow(13)));
        assert_eq!(split.top_degree, 8);
        assert_eq!(split.reduced.ambient_rank, 2);
        assert_eq!(split.reduced.ranks, vec![1]);
        assert_eq!(split.reduced.bundle_degree, -8);

        let inner = oracle_maximal_subsheaf_factor(&split.reduced, &Insertion::one()).unwrap();
        assert_eq!(inner.factor, BigInt::from(2i64.pow(13)));
        assert_eq!(
            split.factor * inner.factor,
            BigInt::from(6i64.pow(13))
        );
    }

    #[test]
    fn maximal_subsheaf_needs_genus_two() {
        let spec = ProblemSpec::new(1, 3, vec![1, 2]);
        assert!(matches!(
            oracle_maximal_subsheaf_factor(&spec, &Insertion::one()),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn maximal_count_cross_checks_one_step_oracle() {
        // m(2, 0, 1, 3): maximal line subbundles of a trivial rank-2
        // bundle on a genus-3 curve. B(q) = sum_{z^2 = q} (2z)^2 = 8q,
        // so the count at the zero-dimensional degree d = 1 is 8 = 2^g.
        let spec = ProblemSpec::new(3, 2, vec![1]);
        let split = oracle_maximal_subsheaf_factor(&spec, &Insertion::one()).unwrap();
        assert_eq!(split.top_degree, 1);
        assert_eq!(split.factor, BigInt::from(8));
    }

    #[test]
    fn maximal_count_rejects_non_integral_degrees() {
        // (g-1) r (n-r) = 1 is odd for g = 2, n = 2, r = 1: no integral
        // degree makes the stage zero-dimensional.
        let spec = ProblemSpec::new(2, 2, vec![1]);
        assert!(matches!(
            oracle_maximal_subsheaf_factor(&spec, &Insertion::one()),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn two_step_reference_solution_satisfies_defining_products() {
        // q1 must equal prod_j (zeta - eta_j).
        let q1 = c(0.8, 0.3);
        let q2 = c(-0.5, 0.7);
        for n in [3u32, 4] {
            let (w, zeta, etas) = two_step_reference_solution(n, q1, q2, 1, 0);
            assert_eq!(etas.len(), n as usize - 1);
            let prod: Complex64 = etas.iter().map(|&e| zeta - e).product();
            assert!(
                (prod - q1).norm() < 1e-9 * (1.0 + q1.norm()),
                "n={n}: got {prod}, want {q1}"
            );
            // Each eta solves Y^n + (-1)^n q2 (Y - zeta) = 0.
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for &eta in &etas {
                let val = eta.powu(n) + sign * q2 * (eta - zeta);
                assert!(val.norm() < 1e-9 * (1.0 + q2.norm()));
            }
            // w is consistent: zeta^{n-1} = q1 (1 + 1/w).
            let lhs = zeta.powu(n - 1);
            let rhs = q1 * (c(1.0, 0.0) + w.finv());
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }
}
