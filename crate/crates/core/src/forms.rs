//! Intersection forms of the target manifold and the cochains `ω_ψ` they induce.
//!
//! A manifold enters only through the matrix of its intersection form on the
//! free part of middle homology. Catalog forms cover the cases that matter in
//! practice; anything else comes from a JSON file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::deleted_product::{deleted_product_pairs, SkewCochain};
use crate::error::{Error, Result};
use crate::ring::{Coefficient, Ring};
use crate::simplicial::{incidence_sign, Simplex, SimplicialComplex};

/// The matrix `A` of a `(-1)^k`-symmetric bilinear form.
#[derive(Clone, PartialEq, Eq)]
pub struct IntersectionForm<R> {
    k: usize,
    matrix: Vec<Vec<R>>,
}

impl<R: Coefficient> IntersectionForm<R> {
    pub fn trivial(k: usize) -> Self {
        IntersectionForm { k, matrix: Vec::new() }
    }

    /// `I_b`. Over the integers this is only skew-symmetric when `k` is even.
    pub fn identity(k: usize, b: usize) -> Result<Self> {
        let matrix = (0..b)
            .map(|i| (0..b).map(|j| if i == j { R::one() } else { R::zero() }).collect())
            .collect();
        IntersectionForm::custom(k, matrix)
    }

    /// `c` hyperbolic blocks `[[0, I_c], [(-1)^k I_c, 0]]`.
    pub fn symplectic(k: usize, c: usize) -> Self {
        let mut matrix = vec![vec![R::zero(); 2 * c]; 2 * c];
        for i in 0..c {
            matrix[i][c + i] = R::one();
            matrix[c + i][i] = R::neg_one_pow(k);
        }
        IntersectionForm { k, matrix }
    }

    pub fn custom(k: usize, matrix: Vec<Vec<R>>) -> Result<Self> {
        let b = matrix.len();
        if matrix.iter().any(|row| row.len() != b) {
            return Err(Error::InvalidForm(format!("matrix of rank {b} must be {b}×{b}")));
        }
        let sign = R::neg_one_pow(k);
        for i in 0..b {
            for j in 0..b {
                if matrix[j][i] != sign.clone() * matrix[i][j].clone() {
                    return Err(Error::InvalidForm(format!(
                        "entries ({i},{j}) and ({j},{i}) violate A^T = (-1)^{k} A over {}",
                        R::RING
                    )));
                }
            }
        }
        Ok(IntersectionForm { k, matrix })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<R>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &R {
        &self.matrix[i][j]
    }

    /// All diagonal entries vanish.
    pub fn is_alternating(&self) -> bool {
        (0..self.rank()).all(|i| self.matrix[i][i].is_zero())
    }

    /// `aᵀ A b`.
    pub fn evaluate(&self, a: &[R], b: &[R]) -> Result<R> {
        let n = self.rank();
        if a.len() != n || b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} and {} for a form of rank {n}",
                a.len(),
                b.len()
            )));
        }
        let mut acc = R::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() && !self.matrix[i][j].is_zero() {
                    acc = acc + ai.clone() * self.matrix[i][j].clone() * bj.clone();
                }
            }
        }
        Ok(acc)
    }

    /// Entrywise image under a ring map, e.g. reduction mod 2.
    pub fn map<S: Coefficient>(&self, f: impl Fn(&R) -> S) -> Result<IntersectionForm<S>> {
        IntersectionForm::custom(self.k, self.matrix.iter().map(|row| row.iter().map(&f).collect()).collect())
    }

    pub fn to_file(&self) -> Result<FormFile> {
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.to_i64().ok_or_else(|| Error::TooLarge(format!("form entry {v}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FormFile {
            ring: R::RING,
            rank: self.rank(),
            matrix,
        })
    }
}

impl<R: fmt::Debug> fmt::Debug for IntersectionForm<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntersectionForm(k={}, {:?})", self.k, self.matrix)
    }
}

/// JSON form file: `{"ring": "Z2", "rank": 2, "matrix": [[0,1],[1,0]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormFile {
    pub ring: Ring,
    pub rank: usize,
    pub matrix: Vec<Vec<i64>>,
}

impl FormFile {
    pub fn parse(text: &str) -> Result<FormFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("form file: {e}")))
    }

    /// An integer form may be read over Z2 (by reduction); not the other way round.
    pub fn to_form<R: Coefficient>(&self, k: usize) -> Result<IntersectionForm<R>> {
        if self.ring == Ring::Z2 && R::RING == Ring::Integers {
            return Err(Error::RingMismatch {
                expected: R::RING,
                got: self.ring,
            });
        }
        if self.matrix.len() != self.rank {
            return Err(Error::InvalidForm(format!(
                "rank {} but {} matrix rows",
                self.rank,
                self.matrix.len()
            )));
        }
        IntersectionForm::custom(
            k,
            self.matrix.iter().map(|row| row.iter().map(|&v| R::from_i64(v)).collect()).collect(),
        )
    }
}

/// The `--form` shorthand: `trivial`, `identity:b`, `symplectic:c` or `@path.json`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormSpec {
    Trivial,
    Identity(usize),
    Symplectic(usize),
    File(PathBuf),
    Inline(FormFile),
}

impl FromStr for FormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let count = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| Error::Parse(format!("`{v}` in form spec `{s}` is not a count")))
        };
        if let Some(path) = s.strip_prefix('@') {
            return Ok(FormSpec::File(PathBuf::from(path)));
        }
        match s.split_once(':') {
            None if s == "trivial" => Ok(FormSpec::Trivial),
            Some(("identity", b)) => Ok(FormSpec::Identity(count(b)?)),
            Some(("symplectic", c)) => Ok(FormSpec::Symplectic(count(c)?)),
            _ => Err(Error::Parse(format!(
                "unknown form `{s}` (expected trivial, identity:B, symplectic:C or @file.json)"
            ))),
        }
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormSpec::Trivial => f.write_str("trivial"),
            FormSpec::Identity(b) => write!(f, "identity:{b}"),
            FormSpec::Symplectic(c) => write!(f, "symplectic:{c}"),
            FormSpec::File(p) => write!(f, "@{}", p.display()),
            FormSpec::Inline(file) => write!(f, "custom(rank {})", file.rank),
        }
    }
}

impl FormSpec {
    pub fn build<R: Coefficient>(&self, k: usize) -> Result<IntersectionForm<R>> {
        match self {
            FormSpec::Trivial => Ok(IntersectionForm::trivial(k)),
            FormSpec::Identity(b) => IntersectionForm::identity(k, *b),
            FormSpec::Symplectic(c) => Ok(IntersectionForm::symplectic(k, *c)),
            FormSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?;
                FormFile::parse(&text)?.to_form(k)
            }
            FormSpec::Inline(file) => file.to_form(k),
        }
    }
}

/// A homomorphism `ψ: C_k(K) → R^b`, given by its values on the `k`-simplices.
#[derive(Clone, PartialEq, Eq)]
pub struct HomomorphismPsi<R> {
    rank: usize,
    values: BTreeMap<Simplex, Vec<R>>,
}

impl<R: Coefficient> HomomorphismPsi<R> {
    pub fn new(rank: usize) -> Self {
        HomomorphismPsi {
            rank,
            values: BTreeMap::new(),
        }
    }

    /// `ψ ≡ 0` on every `k`-simplex of `complex`.
    pub fn zero(complex: &SimplicialComplex, k: usize, rank: usize) -> Self {
        let mut psi = HomomorphismPsi::new(rank);
        for s in complex.simplices(k) {
            psi.values.insert(s.clone(), vec![R::zero(); rank]);
        }
        psi
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn set(&mut self, simplex: Simplex, value: Vec<R>) -> Result<()> {
        if value.len() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "value of length {} for ψ of rank {}",
                value.len(),
                self.rank
            )));
        }
        self.values.insert(simplex, value);
        Ok(())
    }

    pub fn get(&self, simplex: &Simplex) -> Result<&[R]> {
        self.values
            .get(simplex)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingPsiValue(simplex.vertices().to_vec()))
    }

    pub fn values(&self) -> impl Iterator<Item = (&Simplex, &Vec<R>)> {
        self.values.iter()
    }
}

impl<R: Coefficient> fmt::Debug for HomomorphismPsi<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.values.iter()).finish()
    }
}

/// `ω_ψ(σ × τ) = Ω(ψ(σ), ψ(τ))` on every pair of disjoint `k`-simplices.
pub fn omega_psi<R: Coefficient>(
    psi: &HomomorphismPsi<R>,
    form: &IntersectionForm<R>,
    complex: &SimplicialComplex,
) -> Result<SkewCochain<R>> {
    let k = form.k();
    if psi.rank() != form.rank() {
        return Err(Error::DimensionMismatch(format!(
            "ψ of rank {} against a form of rank {}",
            psi.rank(),
            form.rank()
        )));
    }
    let mut omega = SkewCochain::zero(k);
    for pair in deleted_product_pairs(complex, k).pairs() {
        let v = form.evaluate(psi.get(pair.first())?, psi.get(pair.second())?)?;
        omega.set(pair.first().clone(), pair.second().clone(), v)?;
    }
    Ok(omega)
}

/// `ψ(∂κ)` for a `(k+1)`-simplex `κ`.
pub fn psi_boundary_class<R: Coefficient>(psi: &HomomorphismPsi<R>, kappa: &Simplex) -> Result<Vec<R>> {
    if kappa.dim() == 0 {
        return Err(Error::ZeroDimensionalBoundary);
    }
    let mut acc = vec![R::zero(); psi.rank()];
    for (_, face) in kappa.facets() {
        let sign = R::from_i64(incidence_sign(&face, kappa)? as i64);
        for (a, v) in acc.iter_mut().zip(psi.get(&face)?) {
            *a = a.clone() + sign.clone() * v.clone();
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Integer, Z2};
    use proptest::prelude::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn z2(bits: &[u8]) -> Vec<Z2> {
        bits.iter().map(|&b| Z2::from(b)).collect()
    }

    #[test]
    fn catalog_forms() {
        let id = IntersectionForm::<Z2>::identity(1, 1).unwrap();
        assert_eq!(id.matrix(), &[vec![Z2::ONE]]);
        assert!(!id.is_alternating());
        let sym = IntersectionForm::<Z2>::symplectic(1, 1);
        assert_eq!(sym.matrix(), &[z2(&[0, 1]), z2(&[1, 0])]);
        assert!(sym.is_alternating());
        assert_eq!(IntersectionForm::<Z2>::trivial(1).rank(), 0);
        let zsym = IntersectionForm::<Integer>::symplectic(1, 1);
        assert_eq!(zsym.entry(1, 0), &Integer::from(-1));
        assert!(IntersectionForm::<Integer>::custom(1, zsym.matrix().to_vec()).is_ok());
        assert_eq!(IntersectionForm::<Integer>::symplectic(2, 1).entry(1, 0), &Integer::from(1));
    }

    #[test]
    fn integer_identity_needs_even_k() {
        assert!(IntersectionForm::<Integer>::identity(1, 1).is_err());
        assert!(IntersectionForm::<Integer>::identity(2, 3).is_ok());
        assert!(IntersectionForm::<Z2>::identity(1, 3).is_ok());
    }

    #[test]
    fn custom_validation() {
        let bad = vec![z2(&[0, 1]), z2(&[0, 0])];
        assert!(IntersectionForm::custom(1, bad).is_err());
        assert!(IntersectionForm::<Z2>::custom(1, vec![z2(&[1, 0])]).is_err());
    }

    #[test]
    fn form_spec_parsing() {
        assert_eq!("trivial".parse::<FormSpec>().unwrap(), FormSpec::Trivial);
        assert_eq!("identity:2".parse::<FormSpec>().unwrap(), FormSpec::Identity(2));
        assert_eq!("symplectic:1".parse::<FormSpec>().unwrap(), FormSpec::Symplectic(1));
        assert_eq!("@f.json".parse::<FormSpec>().unwrap(), FormSpec::File("f.json".into()));
        for bad in ["identity", "identity:x", "torus", "symplectic:-1"] {
            assert!(bad.parse::<FormSpec>().is_err(), "{bad}");
        }
        assert_eq!(FormSpec::Identity(3).to_string(), "identity:3");
    }

    #[test]
    fn form_file_round_trip() {
        let file = FormFile::parse(r#"{"ring": "Z", "rank": 2, "matrix": [[0, 1], [-1, 0]]}"#).unwrap();
        let over_z: IntersectionForm<Integer> = file.to_form(1).unwrap();
        assert_eq!(over_z.to_file().unwrap(), file);
        let over_z2: IntersectionForm<Z2> = file.to_form(1).unwrap();
        assert_eq!(over_z2, IntersectionForm::symplectic(1, 1));
        let mod2 = FormFile::parse(r#"{"ring": "Z2", "rank": 1, "matrix": [[1]]}"#).unwrap();
        assert!(mod2.to_form::<Integer>(2).is_err());
        let ragged = FormFile::parse(r#"{"ring": "Z2", "rank": 2, "matrix": [[1]]}"#).unwrap();
        assert!(ragged.to_form::<Z2>(1).is_err());
    }

    #[test]
    fn omega_examples() {
        let k5 = SimplicialComplex::simplex_skeleton(4, 1).unwrap();
        let sym = IntersectionForm::<Z2>::symplectic(1, 1);
        let zero = HomomorphismPsi::zero(&k5, 1, 2);
        assert!(omega_psi(&zero, &sym, &k5).unwrap().is_zero());

        let mut psi = zero.clone();
        psi.set(s(&[0, 1]), z2(&[1, 0])).unwrap();
        psi.set(s(&[2, 3]), z2(&[0, 1])).unwrap();
        let omega = omega_psi(&psi, &sym, &k5).unwrap();
        assert_eq!(omega.value(&s(&[0, 1]), &s(&[2, 3])), Z2::ONE);
        assert_eq!(omega.support().count(), 1);

        let id = IntersectionForm::<Z2>::identity(1, 1).unwrap();
        let mut psi = HomomorphismPsi::zero(&k5, 1, 1);
        psi.set(s(&[0, 1]), z2(&[1])).unwrap();
        psi.set(s(&[2, 3]), z2(&[1])).unwrap();
        assert_eq!(omega_psi(&psi, &id, &k5).unwrap().value(&s(&[0, 1]), &s(&[2, 3])), Z2::ONE);
    }

    #[test]
    fn missing_values_are_reported() {
        let k5 = SimplicialComplex::simplex_skeleton(4, 1).unwrap();
        let psi = HomomorphismPsi::<Z2>::new(1);
        let id = IntersectionForm::<Z2>::identity(1, 1).unwrap();
        assert!(matches!(omega_psi(&psi, &id, &k5), Err(Error::MissingPsiValue(_))));
        assert!(psi_boundary_class(&psi, &s(&[0, 1, 2])).is_err());
    }

    #[test]
    fn boundary_class_examples() {
        let d = SimplicialComplex::simplex_skeleton(3, 1).unwrap();
        let zero = HomomorphismPsi::<Integer>::zero(&d, 1, 2);
        assert_eq!(psi_boundary_class(&zero, &s(&[0, 1, 2])).unwrap(), vec![Integer::from(0); 2]);
        let mut one = zero.clone();
        one.set(s(&[0, 2]), vec![Integer::from(3), Integer::from(-1)]).unwrap();
        // [02 : 012] removes vertex 1 at position 1
        assert_eq!(
            psi_boundary_class(&one, &s(&[0, 1, 2])).unwrap(),
            vec![Integer::from(-3), Integer::from(1)]
        );
    }

    fn random_psi_z(complex: &SimplicialComplex, k: usize, b: usize, vals: &[i64]) -> HomomorphismPsi<Integer> {
        let mut psi = HomomorphismPsi::new(b);
        for (i, sx) in complex.simplices(k).enumerate() {
            let v = (0..b).map(|j| Integer::from(vals[(i * b + j) % vals.len()])).collect();
            psi.set(sx.clone(), v).unwrap();
        }
        psi
    }

    proptest! {
        #[test]
        fn omega_is_skew_and_bilinear(vals in proptest::collection::vec(-3i64..4, 1..40), other in proptest::collection::vec(-3i64..4, 1..40)) {
            let d = SimplicialComplex::simplex_skeleton(5, 1).unwrap();
            let form = IntersectionForm::<Integer>::symplectic(1, 1);
            let p = random_psi_z(&d, 1, 2, &vals);
            let q = random_psi_z(&d, 1, 2, &other);
            let omega = omega_psi(&p, &form, &d).unwrap();
            for pair in deleted_product_pairs(&d, 1).pairs() {
                prop_assert_eq!(omega.value(pair.second(), pair.first()), -omega.value(pair.first(), pair.second()));
            }
            // ω_{p+q}(σ×τ) = ω_p + ω_q + Ω(p(σ), q(τ)) + Ω(q(σ), p(τ))
            let mut sum = HomomorphismPsi::new(2);
            for (sx, v) in p.values() {
                let w = q.get(sx).unwrap();
                sum.set(sx.clone(), v.iter().zip(w).map(|(a, b)| a + b).collect()).unwrap();
            }
            let omega_sum = omega_psi(&sum, &form, &d).unwrap();
            let omega_q = omega_psi(&q, &form, &d).unwrap();
            for pair in deleted_product_pairs(&d, 1).pairs() {
                let (a, b) = (pair.first(), pair.second());
                let cross = form.evaluate(p.get(a).unwrap(), q.get(b).unwrap()).unwrap()
                    + form.evaluate(q.get(a).unwrap(), p.get(b).unwrap()).unwrap();
                prop_assert_eq!(omega_sum.value(a, b), omega.value(a, b) + omega_q.value(a, b) + cross);
            }
        }

        #[test]
        fn boundary_classes_of_a_boundary_cancel(bits in proptest::collection::vec(0u8..2, 20)) {
            // k = 1: the four triangles of a tetrahedron
            let d = SimplicialComplex::simplex_skeleton(4, 2).unwrap();
            let mut psi = HomomorphismPsi::<Z2>::new(2);
            for (i, sx) in d.simplices(1).enumerate() {
                psi.set(sx.clone(), z2(&bits[2 * i..2 * i + 2])).unwrap();
            }
            for rho in crate::simplicial::combinations(5, 4) {
                let rho = Simplex::new(rho).unwrap();
                let mut total = vec![Z2::ZERO; 2];
                for (_, kappa) in rho.facets() {
                    for (t, h) in total.iter_mut().zip(psi_boundary_class(&psi, &kappa).unwrap()) {
                        *t += h;
                    }
                }
                prop_assert_eq!(total, vec![Z2::ZERO; 2]);
            }
        }
    }
}
