//! Oriented simplices, finite simplicial complexes and simplicial chains.
//!
//! A simplex is stored as its strictly increasing vertex list, and that
//! ascending order *is* its positive orientation. Every sign convention in the
//! crate (incidence numbers, finger moves, intersection signs) refers back to
//! this single choice.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Coefficient;

/// An oriented simplex with canonically sorted vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Builds a simplex from any vertex list; the vertices are sorted.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        Ok(Simplex(vertices))
    }

    /// Caller guarantees `vertices` is nonempty and strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<u32>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: u32) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains_vertex(*v))
    }

    /// The codimension-one face obtained by deleting the `i`-th vertex.
    pub fn facet(&self, i: usize) -> Option<Simplex> {
        if self.0.len() < 2 || i >= self.0.len() {
            return None;
        }
        let mut vs = self.0.clone();
        vs.remove(i);
        Some(Simplex(vs))
    }

    /// All codimension-one faces, paired with the index of the deleted vertex.
    pub fn facets(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        (0..self.0.len()).filter_map(move |i| self.facet(i).map(|f| (i, f)))
    }

    /// The join `self * {v}`; `None` when `v` is already a vertex.
    pub fn join_vertex(&self, v: u32) -> Option<Simplex> {
        match self.0.binary_search(&v) {
            Ok(_) => None,
            Err(pos) => {
                let mut vs = self.0.clone();
                vs.insert(pos, v);
                Some(Simplex(vs))
            }
        }
    }

    /// Every nonempty face, this simplex included.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl TryFrom<Vec<u32>> for Simplex {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<u32> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

/// The incidence number `[face : simplex]`.
///
/// Removing the vertex at position `i` induces the positive orientation on the
/// face when `i` is even and the negative one when `i` is odd.
pub fn incidence_sign(face: &Simplex, simplex: &Simplex) -> Result<i8> {
    let not_facet = || Error::NotAFacet {
        face: face.0.clone(),
        simplex: simplex.0.clone(),
    };
    if face.0.len() + 1 != simplex.0.len() {
        return Err(not_facet());
    }
    let missing = simplex
        .0
        .iter()
        .position(|v| !face.contains_vertex(*v))
        .ok_or_else(not_facet)?;
    if !face.is_face_of(simplex) {
        return Err(not_facet());
    }
    Ok(if missing % 2 == 0 { 1 } else { -1 })
}

/// A finite formal combination of equidimensional simplices.
#[derive(Clone, PartialEq, Eq)]
pub struct Chain<R> {
    terms: BTreeMap<Simplex, R>,
}

impl<R: Coefficient> Chain<R> {
    pub fn zero() -> Self {
        Chain {
            terms: BTreeMap::new(),
        }
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

    pub fn coefficient(&self, s: &Simplex) -> R {
        self.terms.get(s).cloned().unwrap_or_else(R::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, &R)> {
        self.terms.iter()
    }

    /// Adds `coeff * s`, dropping the term if it cancels.
    pub fn add_term(&mut self, s: Simplex, coeff: R) -> Result<()> {
        if let Some((first, _)) = self.terms.iter().next() {
            if first.dim() != s.dim() {
                return Err(Error::WrongDimension {
                    expected: first.dim(),
                    got: s.dim(),
                });
            }
        }
        if coeff.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(s);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    /// Linear extension of [`boundary_chain`].
    pub fn boundary(&self) -> Result<Chain<R>> {
        let mut out = Chain::zero();
        for (s, c) in &self.terms {
            for (face, fc) in boundary_chain::<R>(s)?.terms {
                out.add_term(face, fc * c.clone())?;
            }
        }
        Ok(out)
    }
}

impl<R: Coefficient> fmt::Debug for Chain<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// `∂σ = Σ_i [face_i : σ] face_i`, in ring `R`.
pub fn boundary_chain<R: Coefficient>(simplex: &Simplex) -> Result<Chain<R>> {
    if simplex.dim() == 0 {
        return Err(Error::ZeroDimensionalBoundary);
    }
    let mut chain = Chain::zero();
    for (i, face) in simplex.facets() {
        chain.add_term(face, R::neg_one_pow(i))?;
    }
    Ok(chain)
}

/// A downward-closed family of simplices on vertices `0..n_vertices`.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n_vertices: u32,
    /// `by_dim[d]` holds the `d`-simplices.
    by_dim: Vec<BTreeSet<Simplex>>,
}

impl SimplicialComplex {
    /// The downward closure of `facets`.
    pub fn build(n_vertices: u32, facets: &[Vec<u32>]) -> Result<Self> {
        let mut complex = SimplicialComplex {
            n_vertices,
            by_dim: Vec::new(),
        };
        // Isolated vertices are part of the vertex set.
        for v in 0..n_vertices {
            complex.insert(Simplex::vertex(v));
        }
        for facet in facets {
            let s = Simplex::new(facet.clone())?;
            if let Some(&bad) = s.0.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::VertexOutOfRange {
                    vertex: bad,
                    n_vertices,
                });
            }
            for face in s.faces() {
                complex.insert(face);
            }
        }
        Ok(complex)
    }

    /// The `k`-skeleton of the `n`-simplex, on vertices `0..=n`.
    pub fn simplex_skeleton(n: u32, k: usize) -> Result<Self> {
        if k > n as usize {
            return Err(Error::DimensionMismatch(format!(
                "skeleton dimension {k} exceeds simplex dimension {n}"
            )));
        }
        let n_vertices = n + 1;
        let mut by_dim = Vec::with_capacity(k + 1);
        for d in 0..=k {
            by_dim.push(
                combinations(n_vertices, d + 1)
                    .into_iter()
                    .map(Simplex::from_sorted)
                    .collect(),
            );
        }
        Ok(SimplicialComplex { n_vertices, by_dim })
    }

    fn insert(&mut self, s: Simplex) {
        let d = s.dim();
        if self.by_dim.len() <= d {
            self.by_dim.resize_with(d + 1, BTreeSet::new);
        }
        self.by_dim[d].insert(s);
    }

    pub fn n_vertices(&self) -> u32 {
        self.n_vertices
    }

    /// Dimension of the complex; `None` for the void complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.iter().rposition(|s| !s.is_empty())
    }

    pub fn simplices(&self, d: usize) -> impl Iterator<Item = &Simplex> {
        self.by_dim.get(d).into_iter().flatten()
    }

    pub fn count(&self, d: usize) -> usize {
        self.by_dim.get(d).map_or(0, BTreeSet::len)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.by_dim.get(s.dim()).is_some_and(|set| set.contains(s))
    }

    /// Maximal simplices, in dimension-then-lexicographic order.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (d, layer) in self.by_dim.iter().enumerate() {
            for s in layer {
                let maximal = self.by_dim.get(d + 1).is_none_or(|up| {
                    !up.iter().any(|t| s.is_face_of(t))
                });
                if maximal {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// The full subcomplex spanned by `vertices`, relabelled to `0..|vertices|`.
    ///
    /// Returns the subcomplex together with the relabelling: entry `i` is the
    /// original label of new vertex `i`.
    pub fn induced_subcomplex(&self, vertices: &[u32]) -> Result<(SimplicialComplex, Vec<u32>)> {
        let mut labels: Vec<u32> = vertices.to_vec();
        labels.sort_unstable();
        labels.dedup();
        if let Some(&bad) = labels.iter().find(|&&v| v >= self.n_vertices) {
            return Err(Error::VertexOutOfRange {
                vertex: bad,
                n_vertices: self.n_vertices,
            });
        }
        let relabel: BTreeMap<u32, u32> = labels
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new as u32))
            .collect();
        let mut sub = SimplicialComplex {
            n_vertices: labels.len() as u32,
            by_dim: Vec::new(),
        };
        for layer in &self.by_dim {
            for s in layer {
                if s.0.iter().all(|v| relabel.contains_key(v)) {
                    sub.insert(Simplex::from_sorted(
                        s.0.iter().map(|v| relabel[v]).collect(),
                    ));
                }
            }
        }
        Ok((sub, labels))
    }

    /// True if every `(k+1)`-subset of vertices spans a simplex (and nothing larger exists).
    pub fn is_full_skeleton(&self, k: usize) -> bool {
        self.n_vertices as usize > k
            && self.dim() == Some(k)
            && (0..=k).all(|d| self.count(d) == binomial(self.n_vertices as u64, d as u64 + 1) as usize)
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("n_vertices", &self.n_vertices)
            .field("f_vector", &self.by_dim.iter().map(BTreeSet::len).collect::<Vec<_>>())
            .finish()
    }
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: u32, size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if size > n as usize {
        return out;
    }
    if size == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut idx: Vec<u32> = (0..size as u32).collect();
    loop {
        out.push(idx.clone());
        let mut i = size;
        while i > 0 && idx[i - 1] == n - (size - (i - 1)) as u32 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Binomial coefficient; saturates rather than overflowing.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(u64::MAX as u128) as u64
}

/// JSON complex description: a facet list whose downward closure is the complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub n_vertices: u32,
    pub simplices: Vec<Vec<u32>>,
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<SimplicialComplex> {
        let file: ComplexFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_complex()
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::build(self.n_vertices, &self.simplices)
    }

    pub fn from_complex(complex: &SimplicialComplex) -> Self {
        ComplexFile {
            n_vertices: complex.n_vertices(),
            simplices: complex.facets().into_iter().map(Vec::from).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Integer, Z2};
    use proptest::prelude::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn build_closes_a_triangle_boundary() {
        let k = SimplicialComplex::build(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(k.count(0), 3);
        assert_eq!(k.count(1), 3);
        assert_eq!(k.count(2), 0);
        assert_eq!(k.dim(), Some(1));
    }

    #[test]
    fn build_keeps_isolated_vertices() {
        let k = SimplicialComplex::build(5, &[vec![0, 1, 2]]).unwrap();
        assert_eq!((k.count(0), k.count(1), k.count(2)), (5, 3, 1));
        assert_eq!(k.facets().len(), 3);
    }

    #[test]
    fn build_rejects_bad_facets() {
        assert_eq!(
            SimplicialComplex::build(4, &[vec![0, 1, 5]]),
            Err(Error::VertexOutOfRange {
                vertex: 5,
                n_vertices: 4
            })
        );
        assert_eq!(
            SimplicialComplex::build(4, &[vec![0, 1, 1]]),
            Err(Error::DuplicateVertex(1))
        );
    }

    #[test]
    fn skeleton_counts() {
        let k5 = SimplicialComplex::simplex_skeleton(4, 1).unwrap();
        assert_eq!((k5.count(0), k5.count(1)), (5, 10));
        let d62 = SimplicialComplex::simplex_skeleton(6, 2).unwrap();
        assert_eq!((d62.count(0), d62.count(1), d62.count(2)), (7, 21, 35));
        let d2 = SimplicialComplex::simplex_skeleton(2, 2).unwrap();
        assert_eq!(d2.facets(), vec![s(&[0, 1, 2])]);
        assert!(SimplicialComplex::simplex_skeleton(2, 3).is_err());
    }

    #[test]
    fn incidence_follows_parity_of_removed_position() {
        let t = s(&[0, 1, 2]);
        assert_eq!(incidence_sign(&s(&[1, 2]), &t), Ok(1));
        assert_eq!(incidence_sign(&s(&[0, 2]), &t), Ok(-1));
        assert_eq!(incidence_sign(&s(&[0, 1]), &t), Ok(1));
        assert!(incidence_sign(&s(&[0, 3]), &t).is_err());
        assert!(incidence_sign(&s(&[0]), &t).is_err());
    }

    #[test]
    fn boundary_of_triangle_and_edge() {
        let d = boundary_chain::<Integer>(&s(&[0, 1, 2])).unwrap();
        assert_eq!(d.coefficient(&s(&[1, 2])), Integer::from(1));
        assert_eq!(d.coefficient(&s(&[0, 2])), Integer::from(-1));
        assert_eq!(d.coefficient(&s(&[0, 1])), Integer::from(1));
        let e = boundary_chain::<Integer>(&s(&[0, 1])).unwrap();
        assert_eq!(e.coefficient(&s(&[1])), Integer::from(1));
        assert_eq!(e.coefficient(&s(&[0])), Integer::from(-1));
        assert_eq!(
            boundary_chain::<Z2>(&s(&[3])),
            Err(Error::ZeroDimensionalBoundary)
        );
    }

    #[test]
    fn induced_subcomplexes() {
        let k6 = SimplicialComplex::simplex_skeleton(5, 1).unwrap();
        let (k5, labels) = k6.induced_subcomplex(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(k5, SimplicialComplex::simplex_skeleton(4, 1).unwrap());
        assert_eq!(labels, vec![0, 1, 2, 3, 4]);

        let d62 = SimplicialComplex::simplex_skeleton(6, 2).unwrap();
        let (same, _) = d62.induced_subcomplex(&[6, 5, 4, 3, 2, 1, 0]).unwrap();
        assert_eq!(same, d62);

        let d82 = SimplicialComplex::simplex_skeleton(8, 2).unwrap();
        let (copy, labels) = d82.induced_subcomplex(&[1, 2, 4, 5, 6, 7, 8]).unwrap();
        assert_eq!(copy.count(2), 35);
        assert_eq!(labels, vec![1, 2, 4, 5, 6, 7, 8]);
        assert!(copy.is_full_skeleton(2));
    }

    #[test]
    fn combinations_and_binomials_agree() {
        for n in 0..9u32 {
            for k in 0..=n as usize + 1 {
                assert_eq!(combinations(n, k).len() as u64, binomial(n as u64, k as u64));
            }
        }
    }

    #[test]
    fn complex_json_round_trip() {
        let text = r#"{"n_vertices": 4, "simplices": [[0,1,2],[2,3]]}"#;
        let k = ComplexFile::parse(text).unwrap();
        assert_eq!(k.count(1), 4);
        let back = ComplexFile::from_complex(&k).to_complex().unwrap();
        assert_eq!(back, k);
    }

    fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
        (4u32..8).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::btree_set(0..n, 1..5), 1..6).prop_map(
                move |facets| {
                    let facets: Vec<Vec<u32>> =
                        facets.into_iter().map(|f| f.into_iter().collect()).collect();
                    SimplicialComplex::build(n, &facets).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn complexes_are_downward_closed(k in arb_complex()) {
            for d in 1..=k.dim().unwrap_or(0) {
                for s in k.simplices(d) {
                    for (_, f) in s.facets() {
                        prop_assert!(k.contains(&f));
                    }
                }
            }
        }

        #[test]
        fn boundary_squared_vanishes(k in arb_complex()) {
            for d in 2..=k.dim().unwrap_or(0) {
                for s in k.simplices(d) {
                    let bz = boundary_chain::<Integer>(s).unwrap().boundary().unwrap();
                    prop_assert!(bz.is_zero());
                    let b2 = boundary_chain::<Z2>(s).unwrap().boundary().unwrap();
                    prop_assert!(b2.is_zero());
                }
            }
        }

        #[test]
        fn skeleton_layers_are_binomial(n in 1u32..9, k in 0usize..4) {
            prop_assume!(k <= n as usize);
            let sk = SimplicialComplex::simplex_skeleton(n, k).unwrap();
            for d in 0..=k {
                prop_assert_eq!(sk.count(d) as u64, binomial(n as u64 + 1, d as u64 + 1));
            }
        }
    }
}
