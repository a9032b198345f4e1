//! The Bethe-type polynomial system attached to a problem spec, its
//! Jacobian, and the normalized Jacobian factor entering point values.

use num_complex::Complex64;

use crate::linalg::{lu_factor, Matrix};
use crate::scalar::{ScaledComplex, Scalar};
use crate::spec::ProblemSpec;

/// Sign convention for the coupling terms.
///
/// Conventions differ only in how the parameters are read: `Paper` puts
/// `(-1)^{r_j - r_{j-1}} q_j` in front of the down-level product,
/// `Degeneration` puts `-q_j`. `sign_convert_q` maps parameter vectors
/// between the two so the solution sets coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignConvention {
    Paper,
    Degeneration,
}

/// Tolerance scales; both are relative to the natural magnitude of the
/// instance and can be overridden from the CLI.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Residual acceptance scale (default `1e-10 * (1 + max |q_j|)`).
    pub resid_scale: f64,
    /// Within-level separation scale (default `1e-6 * (1 + max |z|)`).
    pub sep_scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            resid_scale: 1e-10,
            sep_scale: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn residual(&self, q: &[Complex64]) -> f64 {
        let mx = q.iter().map(|v| v.norm()).fold(0.0, f64::max);
        self.resid_scale * (1.0 + mx)
    }

    pub fn separation(&self, max_abs_z: f64) -> f64 {
        self.sep_scale * (1.0 + max_abs_z)
    }
}

/// A fully instantiated system: rank layout, parameters, weights, and the
/// sign convention under which `q` is read.
#[derive(Clone, Debug)]
pub struct BetheSystem {
    pub spec: ProblemSpec,
    pub q: Vec<Complex64>,
    pub convention: SignConvention,
    /// Flat offsets of each level in the variable vector.
    offsets: Vec<usize>,
}

impl BetheSystem {
    pub fn new(spec: &ProblemSpec, q: Vec<Complex64>, convention: SignConvention) -> BetheSystem {
        assert_eq!(q.len(), spec.num_steps());
        let mut offsets = Vec::with_capacity(spec.num_steps() + 1);
        let mut acc = 0usize;
        for j in 1..=spec.num_steps() {
            offsets.push(acc);
            acc += spec.rank(j) as usize;
        }
        offsets.push(acc);
        BetheSystem {
            spec: spec.clone(),
            q,
            convention,
            offsets,
        }
    }

    pub fn num_variables(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Flat index of entry `i` (0-based) at level `j` (1-based).
    #[inline]
    pub fn index(&self, j: usize, i: usize) -> usize {
        self.offsets[j - 1] + i
    }

    /// The entries of level `j` within a flat vector; level `k+1` yields
    /// the fixed weights (zeros in the non-equivariant theory) and level 0
    /// is empty.
    pub fn level_values<'a, S: Scalar>(&self, z: &'a [S], j: usize, scratch: &mut Vec<S>) -> &'a [S]
    where
        'a: 'a,
    {
        let k = self.spec.num_steps();
        if j == 0 {
            &[]
        } else if j <= k {
            &z[self.offsets[j - 1]..self.offsets[j]]
        } else {
            scratch.clear();
            if self.spec.eps.is_empty() {
                scratch.resize(self.spec.ambient_rank as usize, S::zero());
            } else {
                scratch.extend(self.spec.eps.iter().map(|&e| S::from_c64(e)));
            }
            // Returned through the scratch buffer; lifetime-wise this has
            // to be handled by the caller, so this branch is unreachable
            // here and handled in `upper_level` instead.
            unreachable!("level k+1 goes through upper_level");
        }
    }

    /// The fixed level-(k+1) values.
    pub fn upper_level<S: Scalar>(&self) -> Vec<S> {
        if self.spec.eps.is_empty() {
            vec![S::zero(); self.spec.ambient_rank as usize]
        } else {
            self.spec.eps.iter().map(|&e| S::from_c64(e)).collect()
        }
    }

    /// Sign in front of `q_j` for this convention.
    #[inline]
    fn coupling_sign(&self, j: usize) -> f64 {
        match self.convention {
            SignConvention::Paper => {
                let diff = self.spec.rank(j) as i64 - self.spec.rank(j - 1) as i64;
                if diff % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            SignConvention::Degeneration => -1.0,
        }
    }
}

/// Converts the parameter vector between the two sign conventions
/// (its own inverse: `q_j -> (-1)^{r_j - r_{j-1} + 1} q_j`).
pub fn sign_convert_q(spec: &ProblemSpec, q: &[Complex64]) -> Vec<Complex64> {
    q.iter()
        .enumerate()
        .map(|(idx, &qj)| {
            let diff = spec.rank(idx + 1) as i64 - spec.rank(idx) as i64;
            if (diff + 1) % 2 == 0 {
                qj
            } else {
                -qj
            }
        })
        .collect()
}

/// Evaluates all equations at `z` (level-major, then entry order).
pub fn eval_system<S: Scalar>(sys: &BetheSystem, z: &[S]) -> Vec<S> {
    let k = sys.spec.num_steps();
    let upper: Vec<S> = sys.upper_level();
    let mut out = Vec::with_capacity(sys.num_variables());
    for j in 1..=k {
        let up: &[S] = if j == k {
            &upper
        } else {
            &z[sys.offsets[j]..sys.offsets[j + 1]]
        };
        let down: &[S] = if j == 1 {
            &[]
        } else {
            &z[sys.offsets[j - 2]..sys.offsets[j - 1]]
        };
        let sign = S::from_f64(sys.coupling_sign(j));
        let qj = S::from_c64(sys.q[j - 1]);
        for s in 0..sys.spec.rank(j) as usize {
            let x = z[sys.index(j, s)];
            let mut a = S::one();
            for &u in up {
                a = a * (x - u);
            }
            let mut b = S::one();
            for &dn in down {
                b = b * (x - dn);
            }
            out.push(a + sign * qj * b);
        }
    }
    out
}

/// Maximum equation magnitude at `z`.
pub fn residual_norm<S: Scalar>(sys: &BetheSystem, z: &[S]) -> f64 {
    eval_system(sys, z)
        .iter()
        .map(|v| v.abs_f64())
        .fold(0.0, f64::max)
}

/// Dense Jacobian at `z`. The sparsity is block tridiagonal: the row of
/// equation `(s, j)` touches its own variable and levels `j - 1`, `j + 1`.
pub fn eval_jacobian<S: Scalar>(sys: &BetheSystem, z: &[S]) -> Matrix<S> {
    let k = sys.spec.num_steps();
    let n_var = sys.num_variables();
    let upper: Vec<S> = sys.upper_level();
    let mut m = Matrix::zeros(n_var);
    for j in 1..=k {
        let up_fixed = j == k;
        let up: Vec<S> = if up_fixed {
            upper.clone()
        } else {
            z[sys.offsets[j]..sys.offsets[j + 1]].to_vec()
        };
        let down: Vec<S> = if j == 1 {
            Vec::new()
        } else {
            z[sys.offsets[j - 2]..sys.offsets[j - 1]].to_vec()
        };
        let sign = S::from_f64(sys.coupling_sign(j));
        let qj = S::from_c64(sys.q[j - 1]);
        for s in 0..sys.spec.rank(j) as usize {
            let row = sys.index(j, s);
            let x = z[row];

            // d/dx prod_a (x - up_a): sum over omitted factors.
            let mut da_dx = S::zero();
            for omit in 0..up.len() {
                let mut p = S::one();
                for (a, &u) in up.iter().enumerate() {
                    if a != omit {
                        p = p * (x - u);
                    }
                }
                da_dx = da_dx + p;
            }
            let mut db_dx = S::zero();
            for omit in 0..down.len() {
                let mut p = S::one();
                for (b, &dn) in down.iter().enumerate() {
                    if b != omit {
                        p = p * (x - dn);
                    }
                }
                db_dx = db_dx + p;
            }
            m.set(row, row, da_dx + sign * qj * db_dx);

            if !up_fixed {
                for u_idx in 0..up.len() {
                    let mut p = S::one();
                    for (a, &u) in up.iter().enumerate() {
                        if a != u_idx {
                            p = p * (x - u);
                        }
                    }
                    let col = sys.index(j + 1, u_idx);
                    m.set(row, col, m.at(row, col) - p);
                }
            }
            for b_idx in 0..down.len() {
                let mut p = S::one();
                for (b, &dn) in down.iter().enumerate() {
                    if b != b_idx {
                        p = p * (x - dn);
                    }
                }
                let col = sys.index(j - 1, b_idx);
                m.set(row, col, m.at(row, col) - sign * qj * p);
            }
        }
    }
    m
}

/// Canonical total order on complex values: grid-rounded lexicographic
/// keys with exact components as tie break. The grid makes cross-run
/// ordering stable; the tie break makes the order a function of the value
/// alone.
pub fn canonical_cmp(a: Complex64, b: Complex64, grid: f64) -> std::cmp::Ordering {
    let ka = ((a.re / grid).round() as i64, (a.im / grid).round() as i64);
    let kb = ((b.re / grid).round() as i64, (b.im / grid).round() as i64);
    ka.cmp(&kb)
        .then_with(|| a.re.partial_cmp(&b.re).unwrap())
        .then_with(|| a.im.partial_cmp(&b.im).unwrap())
}

/// Sorts each level of `z` into canonical order, in place.
pub fn canonical_sort_levels<S: Scalar>(sys: &BetheSystem, z: &mut [S], grid: f64) {
    for j in 1..=sys.spec.num_steps() {
        let lo = sys.offsets[j - 1];
        let hi = sys.offsets[j];
        z[lo..hi].sort_by(|&a, &b| canonical_cmp(a.to_c64(), b.to_c64(), grid));
    }
}

/// Minimum within-level separation of `z` (infinite for all-rank-1 levels).
pub fn min_separation<S: Scalar>(sys: &BetheSystem, z: &[S]) -> f64 {
    let mut min = f64::INFINITY;
    for j in 1..=sys.spec.num_steps() {
        let lo = sys.offsets[j - 1];
        let hi = sys.offsets[j];
        for a in lo..hi {
            for b in a + 1..hi {
                min = min.min((z[a] - z[b]).abs_f64());
            }
        }
    }
    min
}

pub fn max_abs<S: Scalar>(z: &[S]) -> f64 {
    z.iter().map(|v| v.abs_f64()).fold(0.0, f64::max)
}

/// The normalized Jacobian factor: `det(Jacobian) / prod_j Delta(level j)`
/// with `Delta` the product of differences over ordered pairs.
///
/// The input is canonically sorted first, so the result is exactly
/// invariant under within-level permutations. Both the determinant and the
/// difference products accumulate in exponent-carrying form, which keeps
/// magnitude and phase separated for large levels and large genus powers.
pub fn eval_j_factor<S: Scalar>(sys: &BetheSystem, z: &[S]) -> ScaledComplex<S> {
    let grid = Tolerances::default().separation(max_abs(z));
    let mut zc = z.to_vec();
    canonical_sort_levels(sys, &mut zc, grid);

    let jac = eval_jacobian(sys, &zc);
    let det = lu_factor(jac).det_scaled();

    let mut delta = ScaledComplex::one();
    for j in 1..=sys.spec.num_steps() {
        let lo = sys.offsets[j - 1];
        let hi = sys.offsets[j];
        for a in lo..hi {
            for b in lo..hi {
                if a != b {
                    delta.mul_value(zc[a] - zc[b]);
                }
            }
        }
    }
    let mut out = det;
    out.div(delta);
    out
}

/// Cheap condition estimate from the pivot spread of the Jacobian LU.
pub fn jacobian_condition<S: Scalar>(sys: &BetheSystem, z: &[S]) -> f64 {
    lu_factor(eval_jacobian(sys, z)).pivot_ratio
}

/// Newton iteration toward a root of the system; returns the final
/// residual. Stops on convergence below `tol`, stall, or `max_iter`.
pub fn newton_polish<S: Scalar>(sys: &BetheSystem, z: &mut Vec<S>, tol: f64, max_iter: usize) -> f64 {
    let mut best = residual_norm(sys, z);
    for _ in 0..max_iter {
        let f = eval_system(sys, z);
        let lu = lu_factor(eval_jacobian(sys, z));
        if lu.singular {
            break;
        }
        let step = lu.solve(&f);
        for (zi, si) in z.iter_mut().zip(step.iter()) {
            *zi = *zi - *si;
        }
        let r = residual_norm(sys, z);
        if r < tol * 1e-4 {
            return r;
        }
        if r >= best * 0.5 {
            return r.min(best);
        }
        best = r;
    }
    best
}
