//! An explicit representative of the van Kampen obstruction.
//!
//! Vertices go to the moment curve `t ↦ (t, t², …, t^{2k})` in `R^{2k}` and each
//! simplex is mapped linearly. Any `2k + 1` points on the curve with distinct
//! parameters are affinely independent, so two disjoint `k`-simplices meet in at
//! most one point and the intersection can be computed exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::deleted_product::{deleted_product_pairs, SkewCochain};
use crate::error::{Error, Result};
use crate::linalg::{determinant, rank, rational_linear_solve, LinearSolution, Rational};
use crate::ring::{Coefficient, Integer, Z2};
use crate::simplicial::{Simplex, SimplicialComplex};

/// Vertex `i` sits at `(t_i, t_i², …, t_i^{2k})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    k: usize,
    parameters: Vec<Rational>,
    coordinates: Vec<Vec<Rational>>,
}

impl Placement {
    pub fn new(k: usize, parameters: Vec<Rational>) -> Result<Self> {
        if k == 0 {
            return Err(Error::DegeneratePlacement("dimension k must be positive".into()));
        }
        let mut sorted = parameters.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegeneratePlacement("moment curve parameters must be distinct".into()));
        }
        let coordinates = parameters
            .iter()
            .map(|t| {
                let mut point = Vec::with_capacity(2 * k);
                let mut power = Rational::one();
                for _ in 0..2 * k {
                    power *= t;
                    point.push(power.clone());
                }
                point
            })
            .collect();
        Ok(Placement {
            k,
            parameters,
            coordinates,
        })
    }

    /// Parameters `1, 2, …, n_vertices`.
    pub fn default_for(n_vertices: u32, k: usize) -> Result<Self> {
        let params = (1..=n_vertices as i64).map(|t| Rational::from_integer(BigInt::from(t))).collect();
        Placement::new(k, params)
    }

    /// Distinct integer parameters drawn from `[-range, range]`.
    pub fn random(n_vertices: u32, k: usize, range: u32, seed: u64) -> Result<Self> {
        let width = 2 * range as usize + 1;
        if width < n_vertices as usize {
            return Err(Error::DegeneratePlacement(format!(
                "cannot draw {n_vertices} distinct parameters from [-{range}, {range}]"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = sample(&mut rng, width, n_vertices as usize)
            .into_iter()
            .map(|i| Rational::from_integer(BigInt::from(i as i64 - range as i64)))
            .collect();
        Placement::new(k, params)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_vertices(&self) -> usize {
        self.parameters.len()
    }

    pub fn parameters(&self) -> &[Rational] {
        &self.parameters
    }

    pub fn point(&self, v: u32) -> Result<&[Rational]> {
        self.coordinates
            .get(v as usize)
            .map(Vec::as_slice)
            .ok_or(Error::VertexOutOfRange {
                vertex: v,
                n_vertices: self.parameters.len() as u32,
            })
    }
}

/// The signed intersection of the linear images of disjoint `k`-simplices, if any.
pub fn simplex_pair_intersection(p: &Placement, sigma: &Simplex, tau: &Simplex) -> Result<Option<i8>> {
    let k = p.k;
    for s in [sigma, tau] {
        if s.dim() != k {
            return Err(Error::WrongDimension { expected: k, got: s.dim() });
        }
    }
    if !sigma.is_disjoint(tau) {
        return Err(Error::NotDisjoint(sigma.vertices().to_vec(), tau.vertices().to_vec()));
    }
    let ps: Vec<&[Rational]> = sigma.vertices().iter().map(|&v| p.point(v)).collect::<Result<_>>()?;
    let qs: Vec<&[Rational]> = tau.vertices().iter().map(|&v| p.point(v)).collect::<Result<_>>()?;

    // Unknowns λ_0..λ_k, μ_0..μ_k:  Σ λ_i p_i − Σ μ_j q_j = 0,  Σ λ = 1,  Σ μ = 1.
    let n = 2 * k + 2;
    let mut a = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![Rational::zero(); n];
    for row in 0..2 * k {
        for i in 0..=k {
            a[row][i] = ps[i][row].clone();
            a[row][k + 1 + i] = -qs[i][row].clone();
        }
    }
    for i in 0..=k {
        a[2 * k][i] = Rational::one();
        a[2 * k + 1][k + 1 + i] = Rational::one();
    }
    b[2 * k] = Rational::one();
    b[2 * k + 1] = Rational::one();
    let coords = match rational_linear_solve(&a, &b)? {
        LinearSolution::Unique(x) => x,
        LinearSolution::Singular => {
            // Parallel hulls (e.g. chords t0+t3 = t1+t2 for k = 1) never meet.
            let augmented: Vec<Vec<Rational>> = a
                .iter()
                .zip(&b)
                .map(|(row, rhs)| row.iter().cloned().chain(std::iter::once(rhs.clone())).collect())
                .collect();
            if rank(&a) < rank(&augmented) {
                return Ok(None);
            }
            return Err(Error::DegeneratePlacement(format!(
                "affine hulls of {sigma:?} and {tau:?} are not in general position"
            )));
        }
    };
    if coords.iter().any(Zero::is_zero) {
        return Err(Error::DegeneratePlacement(format!(
            "{sigma:?} and {tau:?} meet on a boundary face"
        )));
    }
    if coords.iter().any(Signed::is_negative) {
        return Ok(None);
    }
    let frame: Vec<Vec<Rational>> = (0..2 * k)
        .map(|row| {
            (1..=k)
                .map(|i| &ps[i][row] - &ps[0][row])
                .chain((1..=k).map(|j| &qs[j][row] - &qs[0][row]))
                .collect()
        })
        .collect();
    let det = determinant(&frame)?;
    if det.is_zero() {
        return Err(Error::DegeneratePlacement(format!(
            "{sigma:?} and {tau:?} span a degenerate frame"
        )));
    }
    Ok(Some(if det.is_positive() { 1 } else { -1 }))
}

/// `ϑ_g(σ × τ)`: the signed intersection count of every pair of disjoint `k`-simplices.
pub fn vk_representative(complex: &SimplicialComplex, k: usize, p: &Placement) -> Result<SkewCochain<Integer>> {
    if p.k != k {
        return Err(Error::WrongDimension { expected: k, got: p.k });
    }
    if p.n_vertices() < complex.n_vertices() as usize {
        return Err(Error::VertexOutOfRange {
            vertex: complex.n_vertices() - 1,
            n_vertices: p.n_vertices() as u32,
        });
    }
    let mut theta = SkewCochain::zero(k);
    for pair in deleted_product_pairs(complex, k).pairs() {
        if let Some(sign) = simplex_pair_intersection(p, pair.first(), pair.second())? {
            theta.set(pair.first().clone(), pair.second().clone(), Integer::from(sign))?;
        }
    }
    Ok(theta)
}

/// `ϑ_g` for the default placement, re-sampling parameters from a widening
/// range if a placement turns out degenerate.
pub fn vk_representative_with_retry(
    complex: &SimplicialComplex,
    k: usize,
    seed: u64,
) -> Result<(Placement, SkewCochain<Integer>)> {
    let n = complex.n_vertices();
    let mut placement = Placement::default_for(n, k)?;
    let mut range = n.max(1) * 2;
    for attempt in 0..16u64 {
        match vk_representative(complex, k, &placement) {
            Ok(theta) => return Ok((placement, theta)),
            Err(Error::DegeneratePlacement(_)) => {
                placement = Placement::random(n, k, range, seed.wrapping_add(attempt))?;
                range *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegeneratePlacement("no nondegenerate placement found".into()))
}

/// Entrywise reduction modulo 2.
pub fn reduce_ring(xi: &SkewCochain<Integer>) -> SkewCochain<Z2> {
    xi.map(Coefficient::to_z2)
}
