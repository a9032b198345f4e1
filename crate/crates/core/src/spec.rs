//! Problem description and the dimension bookkeeping that determines where
//! generating-polynomial coefficients can live.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::insertion::{Insertion, Primitive};

/// A family of intersection problems: curve genus, the rank chain of the
/// flagged subsheaves, the ambient bundle, and optional torus weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub genus: u32,
    /// Ambient bundle rank `n`.
    pub ambient_rank: u32,
    /// Subsheaf ranks `r_1 <= r_2 <= ... <= r_k <= n`.
    pub ranks: Vec<u32>,
    /// Ambient bundle degree `e`; the solver kernel works at `e = 0` and
    /// negative `e` is folded in by elementary modifications. Positive `e`
    /// is rejected.
    pub bundle_degree: i64,
    /// Equivariant weights (length `n`, pairwise distinct) or empty for the
    /// non-equivariant theory.
    pub eps: Vec<Complex64>,
}

impl ProblemSpec {
    pub fn new(genus: u32, ambient_rank: u32, ranks: Vec<u32>) -> ProblemSpec {
        ProblemSpec {
            genus,
            ambient_rank,
            ranks,
            bundle_degree: 0,
            eps: Vec::new(),
        }
    }

    pub fn with_bundle_degree(mut self, e: i64) -> ProblemSpec {
        self.bundle_degree = e;
        self
    }

    pub fn with_eps(mut self, eps: Vec<Complex64>) -> ProblemSpec {
        self.eps = eps;
        self
    }

    /// Number of flag steps `k`.
    pub fn num_steps(&self) -> usize {
        self.ranks.len()
    }

    /// Extended rank `r_j` with the conventions `r_0 = 0`, `r_{k+1} = n`.
    pub fn rank(&self, j: usize) -> u32 {
        if j == 0 {
            0
        } else if j <= self.ranks.len() {
            self.ranks[j - 1]
        } else {
            self.ambient_rank
        }
    }

    /// Gradient `rho_i = r_{i+1} - r_{i-1}` of the virtual dimension in `d_i`.
    pub fn rho(&self, i: usize) -> i64 {
        self.rank(i + 1) as i64 - self.rank(i - 1) as i64
    }

    /// Dimension of the fiber flag variety, `sum_i r_i (r_{i+1} - r_i)`.
    pub fn flag_dimension(&self) -> i64 {
        (1..=self.num_steps())
            .map(|i| self.rank(i) as i64 * (self.rank(i + 1) as i64 - self.rank(i) as i64))
            .sum()
    }

    /// Total number of Bethe variables, `sum_j r_j`.
    pub fn num_variables(&self) -> usize {
        self.ranks.iter().map(|&r| r as usize).sum()
    }

    /// Number of solution orbits for generic parameters,
    /// `prod_j C(r_{j+1}, r_j)`.
    pub fn expected_orbit_count(&self) -> u128 {
        (1..=self.num_steps())
            .map(|j| binomial(self.rank(j + 1) as u64, self.rank(j) as u64))
            .product()
    }

    /// Size of each solution orbit, `prod_j r_j!`.
    pub fn orbit_weight(&self) -> u128 {
        self.ranks
            .iter()
            .map(|&r| (1..=r as u128).product::<u128>())
            .product()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.num_steps();
        if k == 0 {
            return Err(Error::RankChainInvalid("empty rank chain".into()));
        }
        if self.ambient_rank == 0 {
            return Err(Error::RankChainInvalid("ambient rank must be >= 1".into()));
        }
        if self.ranks[0] == 0 {
            return Err(Error::RankChainInvalid("ranks must be >= 1".into()));
        }
        for w in self.ranks.windows(2) {
            if w[0] > w[1] {
                return Err(Error::RankChainInvalid(format!(
                    "ranks must be non-decreasing, got {:?}",
                    self.ranks
                )));
            }
        }
        if *self.ranks.last().unwrap() > self.ambient_rank {
            return Err(Error::RankChainInvalid(format!(
                "top rank {} exceeds ambient rank {}",
                self.ranks.last().unwrap(),
                self.ambient_rank
            )));
        }
        if self.bundle_degree > 0 {
            return Err(Error::BundleDegreeUnsupported(self.bundle_degree));
        }
        if !self.eps.is_empty() {
            if self.eps.len() != self.ambient_rank as usize {
                return Err(Error::RankChainInvalid(format!(
                    "expected {} equivariant weights, got {}",
                    self.ambient_rank,
                    self.eps.len()
                )));
            }
            let mut min_sep = f64::INFINITY;
            for a in 0..self.eps.len() {
                for b in a + 1..self.eps.len() {
                    min_sep = min_sep.min((self.eps[a] - self.eps[b]).norm());
                }
            }
            let scale = 1.0 + self.eps.iter().map(|e| e.norm()).fold(0.0, f64::max);
            if self.eps.len() > 1 && min_sep < 1e-12 * scale {
                return Err(Error::EquivariantParamsDegenerate { min_sep });
            }
        }
        Ok(())
    }

    /// Virtual dimension of the moduli space at multidegree `d`.
    pub fn virtual_dimension(&self, d: &[i64]) -> i64 {
        assert_eq!(d.len(), self.num_steps());
        let g = self.genus as i64;
        let base = (1 - g) * self.flag_dimension()
            + self.bundle_degree * (self.rank(1) as i64 - self.ambient_rank as i64);
        base + d
            .iter()
            .enumerate()
            .map(|(idx, &di)| di * self.rho(idx + 1))
            .sum::<i64>()
    }

    /// Relative virtual dimension of the j-th stage of the flag tower
    /// (1-indexed), with `d_{k+1} = 0`.
    pub fn stage_dimension(&self, d: &[i64], j: usize) -> i64 {
        assert!(j >= 1 && j <= self.num_steps());
        let g = self.genus as i64;
        let rj = self.rank(j) as i64;
        let rj1 = self.rank(j + 1) as i64;
        let dj = d[j - 1];
        let dj1 = if j < self.num_steps() { d[j] } else { 0 };
        ((1 - g) * rj - self.bundle_degree) * (rj1 - rj) + rj1 * dj - rj * dj1
    }

    /// Tail sums `sum_{i=j..k} stage_dimension(d, i)` for `j = 1..=k`.
    ///
    /// A negative tail sum certifies that the coefficient at `d` vanishes.
    pub fn stage_tail_sums(&self, d: &[i64]) -> Vec<i64> {
        let k = self.num_steps();
        let stages: Vec<i64> = (1..=k).map(|j| self.stage_dimension(d, j)).collect();
        (0..k)
            .map(|j| stages[j..].iter().sum())
            .collect()
    }

    /// True when some tail sum of stage dimensions is negative at `d`.
    pub fn vanishing_criterion(&self, d: &[i64]) -> bool {
        self.stage_tail_sums(d).iter().any(|&s| s < 0)
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The multidegrees that can carry a nonzero coefficient for an insertion
/// of the given degree.
#[derive(Clone, Debug)]
pub struct Support {
    /// Lexicographically sorted multidegrees.
    pub degrees: Vec<Vec<i64>>,
    /// Set when a coordinate with `rho_i = 0` was bounded by `d_i <= d_{i-1}`.
    pub chain_bound_used: bool,
}

/// Enumerates all `d >= 0` with `virtual_dimension(d) == insertion_degree`.
///
/// Coordinates with `rho_i > 0` are bounded by the dimension constraint
/// itself. A coordinate with `rho_i = 0` (three equal consecutive ranks) is
/// invisible to the constraint and is bounded by the nonemptiness chain
/// `d_i <= d_{i-1}` instead. A caller-provided `cap` replaces both bounds.
pub fn degree_support(
    spec: &ProblemSpec,
    insertion_degree: i64,
    cap: Option<i64>,
) -> Result<Support> {
    spec.validate()?;
    let k = spec.num_steps();
    let g = spec.genus as i64;
    let base = (1 - g) * spec.flag_dimension()
        + spec.bundle_degree * (spec.rank(1) as i64 - spec.ambient_rank as i64);
    let target = insertion_degree - base;

    let mut degrees = Vec::new();
    let mut chain_bound_used = false;
    if target >= 0 {
        let mut current = vec![0i64; k];
        enumerate(
            spec,
            cap,
            0,
            target,
            &mut current,
            &mut degrees,
            &mut chain_bound_used,
        )?;
    }
    degrees.sort();
    Ok(Support {
        degrees,
        chain_bound_used,
    })
}

fn enumerate(
    spec: &ProblemSpec,
    cap: Option<i64>,
    idx: usize,
    remaining: i64,
    current: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
    chain_bound_used: &mut bool,
) -> Result<()> {
    let k = spec.num_steps();
    if idx == k {
        if remaining == 0 {
            out.push(current.clone());
        }
        return Ok(());
    }
    let rho = spec.rho(idx + 1);
    let hi = match cap {
        Some(c) => c,
        None if rho > 0 => remaining / rho,
        None => {
            if idx == 0 {
                return Err(Error::UnboundedSupport { coordinate: 1 });
            }
            *chain_bound_used = true;
            current[idx - 1]
        }
    };
    for di in 0..=hi.max(-1) {
        let used = di * rho;
        if used > remaining {
            break;
        }
        current[idx] = di;
        enumerate(spec, cap, idx + 1, remaining - used, current, out, chain_bound_used)?;
    }
    current[idx] = 0;
    Ok(())
}

/// Folds a negative bundle degree into the insertion: each elementary
/// modification multiplies by the top class at the last level and shifts
/// every multidegree down by one.
///
/// Returns the degree-zero spec, the augmented insertion, and the shift `m`
/// such that `coeff_e(d) = coeff_0(d + (m,...,m))`.
pub fn reduce_bundle_degree(
    spec: &ProblemSpec,
    insertion: &Insertion,
) -> Result<(ProblemSpec, Insertion, u32)> {
    spec.validate()?;
    if spec.bundle_degree == 0 {
        return Ok((spec.clone(), insertion.clone(), 0));
    }
    let m = (-spec.bundle_degree) as u32;
    let k = spec.num_steps() as u32;
    let top = Primitive::ElemSym {
        i: *spec.ranks.last().unwrap(),
        level: k,
    };
    let mut reduced = spec.clone();
    reduced.bundle_degree = 0;
    Ok((reduced, insertion.mul_primitive(top, m), m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::insertion::parse_insertion;

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn validates_rank_chains() {
        assert!(ProblemSpec::new(0, 3, vec![1, 2]).validate().is_ok());
        assert!(ProblemSpec::new(0, 3, vec![2, 1]).validate().is_err());
        assert!(ProblemSpec::new(0, 3, vec![1, 4]).validate().is_err());
        assert!(ProblemSpec::new(0, 3, vec![]).validate().is_err());
        assert!(ProblemSpec::new(0, 3, vec![0, 1]).validate().is_err());
    }

    #[test]
    fn rejects_positive_bundle_degree() {
        let spec = ProblemSpec::new(0, 2, vec![1]).with_bundle_degree(1);
        assert!(matches!(
            spec.validate(),
            Err(Error::BundleDegreeUnsupported(1))
        ));
    }

    #[test]
    fn rejects_repeated_weights() {
        let spec =
            ProblemSpec::new(0, 3, vec![1]).with_eps(vec![c64(1.0), c64(2.0), c64(1.0)]);
        assert!(matches!(
            spec.validate(),
            Err(Error::EquivariantParamsDegenerate { .. })
        ));
        let ok = ProblemSpec::new(0, 3, vec![1]).with_eps(vec![c64(1.0), c64(2.0), c64(3.0)]);
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn virtual_dimension_matches_hand_computation() {
        // Genus 13, n = 3, ranks (1,2): flag dimension 3, rho = (2, 2).
        let spec = ProblemSpec::new(13, 3, vec![1, 2]);
        assert_eq!(spec.virtual_dimension(&[10, 8]), 0);
        assert_eq!(spec.virtual_dimension(&[9, 9]), 0);
        // Genus 0 same chain: 3 + 2 d_1 + 2 d_2.
        let g0 = ProblemSpec::new(0, 3, vec![1, 2]);
        assert_eq!(g0.virtual_dimension(&[0, 0]), 3);
        // Projective-line case: dim = 1 - g + 2 d.
        let p1 = ProblemSpec::new(1, 2, vec![1]);
        for d in 0..5 {
            assert_eq!(p1.virtual_dimension(&[d]), 2 * d);
        }
    }

    #[test]
    fn virtual_dimension_is_affine_in_degree() {
        // Finite differences in each coordinate recover rho exactly.
        let spec = ProblemSpec::new(2, 4, vec![1, 2, 2]);
        let d0 = vec![3i64, 5, 2];
        let v0 = spec.virtual_dimension(&d0);
        for i in 0..3 {
            let mut d1 = d0.clone();
            d1[i] += 1;
            assert_eq!(spec.virtual_dimension(&d1) - v0, spec.rho(i + 1));
        }
    }

    #[test]
    fn stage_dimensions_sum_to_virtual_dimension() {
        let spec = ProblemSpec::new(3, 4, vec![1, 3]).with_bundle_degree(-2);
        let d = vec![4i64, 1];
        let total: i64 = (1..=2).map(|j| spec.stage_dimension(&d, j)).sum();
        assert_eq!(total, spec.virtual_dimension(&d));
    }

    #[test]
    fn tail_sums_flag_the_expected_vanishing() {
        // Genus 13, ranks (1,2), n = 3: the tail criterion fires at (13,5)
        // but stays silent at (9,9) and (5,13).
        let spec = ProblemSpec::new(13, 3, vec![1, 2]);
        assert!(spec.vanishing_criterion(&[13, 5]));
        assert!(!spec.vanishing_criterion(&[9, 9]));
        assert!(!spec.vanishing_criterion(&[5, 13]));
        assert_eq!(spec.stage_tail_sums(&[13, 5]), vec![0, -9]);
    }

    #[test]
    fn support_on_a_line() {
        // Genus 0, n = 3, ranks (1,2), insertion degree 5: d_1 + d_2 = 1.
        let spec = ProblemSpec::new(0, 3, vec![1, 2]);
        let s = degree_support(&spec, 5, None).unwrap();
        assert_eq!(s.degrees, vec![vec![0, 1], vec![1, 0]]);
        assert!(!s.chain_bound_used);
    }

    #[test]
    fn support_for_the_genus_13_family() {
        // Degree-0 insertion at genus 13: the 19 points of d_1 + d_2 = 18.
        let spec = ProblemSpec::new(13, 3, vec![1, 2]);
        let s = degree_support(&spec, 0, None).unwrap();
        assert_eq!(s.degrees.len(), 19);
        for d in &s.degrees {
            assert_eq!(d[0] + d[1], 18);
            assert_eq!(spec.virtual_dimension(d), 0);
        }
    }

    #[test]
    fn support_uses_chain_bound_for_flat_coordinates() {
        // Punctual chain (2,2) in rank 2: rho = (2,0), bound d_2 <= d_1.
        let spec = ProblemSpec::new(0, 2, vec![2, 2]);
        let ins = parse_insertion("c2[1]").unwrap();
        let delta = ins.degree(&spec).unwrap();
        let s = degree_support(&spec, delta, None).unwrap();
        assert_eq!(s.degrees, vec![vec![1, 0], vec![1, 1]]);
        assert!(s.chain_bound_used);
    }

    #[test]
    fn cap_overrides_chain_bound() {
        let spec = ProblemSpec::new(0, 2, vec![2, 2]);
        let s = degree_support(&spec, 2, Some(3)).unwrap();
        assert_eq!(s.degrees, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]]);
    }

    #[test]
    fn empty_support_when_target_negative() {
        let spec = ProblemSpec::new(0, 3, vec![1, 2]);
        let s = degree_support(&spec, 1, None).unwrap();
        assert!(s.degrees.is_empty());
    }

    #[test]
    fn bundle_degree_reduction_augments_the_insertion() {
        let spec = ProblemSpec::new(0, 2, vec![1]).with_bundle_degree(-1);
        let (s0, ins, shift) = reduce_bundle_degree(&spec, &Insertion::one()).unwrap();
        assert_eq!(s0.bundle_degree, 0);
        assert_eq!(shift, 1);
        assert_eq!(ins, parse_insertion("c1[1]").unwrap());
    }
}
