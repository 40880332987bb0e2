//! Integral lattices given by a Gram matrix, optionally embedded in an ambient
//! lattice.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{LatticeError, Result};
use crate::matrix::{self, IntMatrix};

/// Basis rows of a sublattice, written in the coordinates of `ambient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub ambient: Arc<Lattice>,
    pub basis: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    embedding: Option<Embedding>,
}

/// A vector of `L ⊗ Q` in the coordinates of some lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalVector {
    pub coords: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Invariant factors `d1 | d2 | ...`, each greater than one.
    pub divisors: Vec<BigInt>,
    /// Dual vectors; generator `i` has order `divisors[i]` in `L'/L`.
    pub generators: Vec<RationalVector>,
    pub order: BigInt,
}

impl DiscriminantGroup {
    /// Minimal number of generators.
    pub fn length(&self) -> usize {
        self.divisors.len()
    }
}

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self { coords }
    }

    pub fn from_integers(coords: &[BigInt]) -> Self {
        Self {
            coords: coords
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn bigs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Cartan matrix of a simply laced Dynkin diagram given by its edges
/// (1-based node labels).
fn simply_laced(rank: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut g = vec![vec![BigInt::zero(); rank]; rank];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = BigInt::from(2);
    }
    for &(a, b) in edges {
        g[a - 1][b - 1] = BigInt::from(-1);
        g[b - 1][a - 1] = BigInt::from(-1);
    }
    g
}

// Bourbaki numbering: node 2 hangs off node 4, the chain is 1-3-4-5-...
const E8_EDGES: [(usize, usize); 7] = [(1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7), (7, 8)];
const E7_EDGES: [(usize, usize); 6] = [(1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7)];
const E6_EDGES: [(usize, usize); 5] = [(1, 3), (3, 4), (2, 4), (4, 5), (5, 6)];

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let rows = gram.len();
        if let Some(bad) = gram.iter().find(|r| r.len() != rows) {
            return Err(LatticeError::NotSquare {
                rows,
                cols: bad.len(),
            });
        }
        if let Some((row, col)) = matrix::is_symmetric(&gram) {
            return Err(LatticeError::NotSymmetric { row, col });
        }
        Ok(Self {
            gram,
            embedding: None,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(matrix::from_i64(rows))
    }

    /// The sublattice of `ambient` spanned by the rows of `basis`.
    pub fn sublattice(ambient: &Lattice, basis: IntMatrix) -> Result<Self> {
        for row in &basis {
            if row.len() != ambient.rank() {
                return Err(LatticeError::DimensionMismatch {
                    expected: ambient.rank(),
                    got: row.len(),
                });
            }
        }
        let gram = matrix::mul(&matrix::mul(&basis, &ambient.gram), &matrix::transpose(&basis));
        Ok(Self {
            gram,
            embedding: Some(Embedding {
                ambient: Arc::new(ambient.clone()),
                basis,
            }),
        })
    }

    pub fn e8() -> Self {
        Self::new(simply_laced(8, &E8_EDGES)).expect("cartan matrix is symmetric")
    }

    pub fn e7() -> Self {
        Self::new(simply_laced(7, &E7_EDGES)).expect("cartan matrix is symmetric")
    }

    pub fn e6() -> Self {
        Self::new(simply_laced(6, &E6_EDGES)).expect("cartan matrix is symmetric")
    }

    /// The hyperbolic plane `II(1,1)`.
    pub fn hyperbolic() -> Self {
        Self::from_i64(&[&[0, 1], &[1, 0]]).expect("symmetric")
    }

    pub fn rank1(norm: impl Into<BigInt>) -> Self {
        Self {
            gram: vec![vec![norm.into()]],
            embedding: None,
        }
    }

    /// The even unimodular lattices `II(p,q)` that are needed here, built from
    /// hyperbolic planes and copies of `-E8`.
    pub fn unimodular(p: i64, q: i64) -> Result<Self> {
        let h = Self::hyperbolic();
        let ne8 = Self::e8().rescale(-1);
        let parts: Vec<&Lattice> = match (p, q) {
            (1, 1) => vec![&h],
            (1, 9) => vec![&h, &ne8],
            (1, 17) => vec![&h, &ne8, &ne8],
            (2, 26) => vec![&ne8, &ne8, &ne8, &h, &h],
            (3, 19) => vec![&h, &h, &h, &ne8, &ne8],
            _ => return Err(LatticeError::UnknownUnimodular(p, q)),
        };
        Ok(Self::direct_sum_all(parts))
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let n = self.rank();
        let m = other.rank();
        let mut gram = vec![vec![BigInt::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                gram[n + i][n + j] = other.gram[i][j].clone();
            }
        }
        Lattice {
            gram,
            embedding: None,
        }
    }

    pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a Lattice>) -> Lattice {
        parts
            .into_iter()
            .fold(Lattice::new(Vec::new()).expect("empty"), |acc, l| acc.direct_sum(l))
    }

    /// Multiply the form by `factor`; `rescale(-1)` turns `E8` into `-E8`.
    pub fn rescale(&self, factor: i64) -> Lattice {
        let f = BigInt::from(factor);
        Lattice {
            gram: self
                .gram
                .iter()
                .map(|r| r.iter().map(|v| v * &f).collect())
                .collect(),
            embedding: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    pub fn determinant(&self) -> BigInt {
        matrix::determinant(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i].is_even())
    }

    fn require_nondegenerate(&self) -> Result<BigInt> {
        let det = self.determinant();
        if det.is_zero() {
            Err(LatticeError::Degenerate)
        } else {
            Ok(det)
        }
    }

    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = matrix::mat_vec(&self.gram, y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        self.pairing(x, x)
    }

    pub fn rational_pairing(&self, x: &RationalVector, y: &RationalVector) -> BigRational {
        let mut total = BigRational::zero();
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if !self.gram[i][j].is_zero() {
                    total += xi * yj * &self.gram[i][j];
                }
            }
        }
        total
    }

    pub fn rational_norm(&self, x: &RationalVector) -> BigRational {
        self.rational_pairing(x, x)
    }

    /// Numbers of positive and negative eigenvalues, by symmetric rational
    /// elimination.
    pub fn signature(&self) -> Result<(usize, usize)> {
        self.require_nondegenerate()?;
        let n = self.rank();
        let mut a = matrix::to_rational(&self.gram);
        let (mut pos, mut neg) = (0, 0);
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                    a.swap(k, i);
                    for row in a.iter_mut() {
                        row.swap(k, i);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // replace e_k by e_k + e_j: new diagonal 2 a_kj
                    for c in 0..n {
                        let t = a[j][c].clone();
                        a[k][c] += t;
                    }
                    for row in a.iter_mut() {
                        let t = row[j].clone();
                        row[k] += t;
                    }
                } else {
                    return Err(LatticeError::Degenerate);
                }
            }
            let p = a[k][k].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &p;
                for j in k..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
            for i in k + 1..n {
                a[k][i] = BigRational::zero();
                a[i][k] = BigRational::zero();
            }
        }
        Ok((pos, neg))
    }

    pub fn is_positive_definite(&self) -> bool {
        matches!(self.signature(), Ok((p, 0)) if p == self.rank())
    }

    /// Gram matrix of the positive definite version of a definite lattice:
    /// the gram itself, or its negative when the lattice is negative definite.
    pub fn definite_gram(&self) -> Result<IntMatrix> {
        let (pos, neg) = self.signature()?;
        if neg == 0 {
            Ok(self.gram.clone())
        } else if pos == 0 {
            Ok(self.rescale(-1).gram)
        } else {
            Err(LatticeError::Indefinite)
        }
    }

    /// Rows of the inverse Gram matrix: dual vector `i` pairs to `δ_ij` with
    /// basis vector `j`.
    pub fn dual_basis(&self) -> Result<Vec<RationalVector>> {
        self.require_nondegenerate()?;
        let inv = matrix::rational_inverse(&self.gram).ok_or(LatticeError::Degenerate)?;
        Ok(inv.into_iter().map(RationalVector::new).collect())
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        let det = self.require_nondegenerate()?;
        let snf = matrix::smith_normal_form(&self.gram);
        // P G Q = D, so G^{-1} = Q D^{-1} P and column i of Q over d_i is a
        // dual vector of order d_i.
        let mut divisors = Vec::new();
        let mut generators = Vec::new();
        for (i, d) in snf.diagonal.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let coords = snf
                .right
                .iter()
                .map(|row| BigRational::new(row[i].clone(), d.clone()))
                .collect();
            divisors.push(d.clone());
            generators.push(RationalVector::new(coords));
        }
        Ok(DiscriminantGroup {
            divisors,
            generators,
            order: det.abs(),
        })
    }

    pub fn is_primitive_vector(&self, x: &[BigInt]) -> Result<bool> {
        if x.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: x.len(),
            });
        }
        let g = matrix::gcd_all(x);
        if g.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        Ok(g.is_one())
    }

    /// Index of the span of `basis` in its saturation; fails on dependent rows.
    pub fn saturation_index(basis: &[Vec<BigInt>]) -> Result<BigInt> {
        let snf = matrix::smith_normal_form(basis);
        if snf.diagonal.len() < basis.len() {
            return Err(LatticeError::DependentBasis);
        }
        Ok(snf.diagonal.iter().product())
    }

    /// `{x in self : (x, s) = 0 for every basis row s}` with a Hermite-form
    /// basis. The rows must span a primitive sublattice.
    pub fn complement_of_basis(&self, basis: &[Vec<BigInt>]) -> Result<Lattice> {
        self.require_nondegenerate()?;
        for row in basis {
            if row.len() != self.rank() {
                return Err(LatticeError::DimensionMismatch {
                    expected: self.rank(),
                    got: row.len(),
                });
            }
        }
        let index = Self::saturation_index(basis)?;
        if !index.is_one() {
            return Err(LatticeError::NotPrimitive { index });
        }
        let constraints = matrix::mul(basis, &self.gram);
        let kernel = matrix::integer_kernel(&constraints, self.rank());
        Lattice::sublattice(self, kernel)
    }

    pub fn orthogonal_complement(ambient: &Lattice, sub: &Lattice) -> Result<Lattice> {
        let emb = sub.embedding.as_ref().ok_or_else(|| {
            LatticeError::InvalidArgument("sublattice carries no ambient coordinates".into())
        })?;
        if emb.ambient.gram != ambient.gram {
            return Err(LatticeError::InvalidArgument(
                "sublattice is embedded in a different ambient lattice".into(),
            ));
        }
        ambient.complement_of_basis(&emb.basis)
    }

    /// Parse the plain-text gram format: the rank on the first line, then one
    /// row of whitespace separated integers per line.
    pub fn from_gram_text(text: &str) -> Result<Lattice> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let rank: usize = lines
            .next()
            .ok_or_else(|| LatticeError::GramFile("empty input".into()))?
            .parse()
            .map_err(|e| LatticeError::GramFile(format!("bad rank: {e}")))?;
        let mut gram = Vec::with_capacity(rank);
        for r in 0..rank {
            let line = lines
                .next()
                .ok_or_else(|| LatticeError::GramFile(format!("missing row {}", r + 1)))?;
            let row = parse_int_row(line)?;
            if row.len() != rank {
                return Err(LatticeError::GramFile(format!(
                    "row {} has {} entries, expected {rank}",
                    r + 1,
                    row.len()
                )));
            }
            gram.push(row);
        }
        if let Some(extra) = lines.next() {
            return Err(LatticeError::GramFile(format!("unexpected trailing line {extra:?}")));
        }
        Lattice::new(gram)
    }

    pub fn to_gram_text(&self) -> String {
        let mut out = format!("{}\n", self.rank());
        for row in &self.gram {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn parse_int_row(line: &str) -> Result<Vec<BigInt>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<BigInt>()
                .map_err(|e| LatticeError::GramFile(format!("bad integer {t:?}: {e}")))
        })
        .collect()
}

/// Convenience for tests and callers holding small coordinates.
pub fn int_vector(v: &[i64]) -> Vec<BigInt> {
    bigs(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn determinants_of_named_lattices() {
        assert_eq!(Lattice::from_i64(&[&[8, 4], &[4, 0]]).unwrap().determinant(), (-16).into());
        assert_eq!(Lattice::rank1(2).determinant(), 2.into());
        assert_eq!(Lattice::e8().determinant(), 1.into());
        assert_eq!(
            matrix::determinant_cofactor(Lattice::e8().gram()),
            BigInt::from(1)
        );
        assert_eq!(Lattice::e7().determinant(), 2.into());
        assert_eq!(Lattice::e6().determinant(), 3.into());
    }

    #[test]
    fn signatures() {
        assert_eq!(Lattice::hyperbolic().signature().unwrap(), (1, 1));
        assert_eq!(Lattice::unimodular(2, 26).unwrap().signature().unwrap(), (2, 26));
        let s = Lattice::rank1(2).direct_sum(&Lattice::e8().rescale(-1));
        assert_eq!(s.signature().unwrap(), (1, 8));
        let degenerate = Lattice::from_i64(&[&[0, 0], &[0, 2]]).unwrap();
        assert_eq!(degenerate.signature(), Err(LatticeError::Degenerate));
    }

    #[test]
    fn unimodular_constructors() {
        for (p, q) in [(1, 1), (1, 9), (1, 17), (2, 26), (3, 19)] {
            let l = Lattice::unimodular(p, q).unwrap();
            assert_eq!(l.rank() as i64, p + q);
            assert_eq!(l.determinant().abs(), BigInt::one());
            assert_eq!(l.signature().unwrap(), (p as usize, q as usize));
            assert!(l.is_even());
        }
        assert!(matches!(
            Lattice::unimodular(1, 25),
            Err(LatticeError::UnknownUnimodular(1, 25))
        ));
        let h = Lattice::hyperbolic();
        let ne8 = Lattice::e8().rescale(-1);
        assert_eq!(
            Lattice::unimodular(1, 17).unwrap(),
            Lattice::direct_sum_all([&h, &ne8, &ne8])
        );
    }

    #[test]
    fn discriminant_groups() {
        assert!(Lattice::e8().discriminant_group().unwrap().divisors.is_empty());
        let r = Lattice::rank1(6).discriminant_group().unwrap();
        assert_eq!(r.divisors, vec![BigInt::from(6)]);
        assert_eq!(r.generators[0].coords, vec![q(1, 6)]);
        let e7 = Lattice::e7();
        let d = e7.discriminant_group().unwrap();
        assert_eq!(d.divisors, vec![BigInt::from(2)]);
        assert_eq!(d.order, BigInt::from(2));
        // the generator is a dual vector that is not in the lattice
        let g = &d.generators[0];
        assert!(!g.is_integral());
        for b in 0..7 {
            let mut e = vec![BigInt::zero(); 7];
            e[b] = BigInt::one();
            assert!(e7.rational_pairing(g, &RationalVector::from_integers(&e)).is_integer());
        }
    }

    #[test]
    fn dual_basis_examples() {
        assert_eq!(Lattice::rank1(2).dual_basis().unwrap()[0].coords, vec![q(1, 2)]);
        let h = Lattice::hyperbolic().dual_basis().unwrap();
        assert_eq!(h[0].coords, vec![q(0, 1), q(1, 1)]);
        assert!(Lattice::e8().dual_basis().unwrap().iter().all(RationalVector::is_integral));
    }

    #[test]
    fn complement_of_root_is_e7() {
        let e8 = Lattice::e8();
        let highest = int_vector(&[2, 3, 4, 6, 5, 4, 3, 2]);
        let u = e8.complement_of_basis(std::slice::from_ref(&highest)).unwrap();
        assert_eq!(u.rank(), 7);
        assert_eq!(u.determinant(), 2.into());
        let emb = u.embedding().unwrap();
        for row in &emb.basis {
            assert!(e8.pairing(row, &highest).is_zero());
        }
        let twice: Vec<BigInt> = highest.iter().map(|c| c * 2).collect();
        assert!(matches!(
            e8.complement_of_basis(&[twice]),
            Err(LatticeError::NotPrimitive { .. })
        ));
    }

    #[test]
    fn complement_in_hyperbolic_sum() {
        let hh = Lattice::hyperbolic().direct_sum(&Lattice::hyperbolic());
        let first = Lattice::sublattice(&hh, vec![int_vector(&[1, 0, 0, 0]), int_vector(&[0, 1, 0, 0])]).unwrap();
        let c = Lattice::orthogonal_complement(&hh, &first).unwrap();
        assert_eq!(c.gram(), Lattice::hyperbolic().gram());
    }

    #[test]
    fn primitive_vectors() {
        let e8 = Lattice::e8();
        assert!(e8.is_primitive_vector(&int_vector(&[1, 0, 0, 0, 0, 0, 0, 0])).unwrap());
        assert!(!e8.is_primitive_vector(&int_vector(&[2, 0, 0, 0, 0, 0, 0, 0])).unwrap());
        assert_eq!(
            e8.is_primitive_vector(&int_vector(&[0; 8])),
            Err(LatticeError::ZeroVector)
        );
    }

    #[test]
    fn gram_text_roundtrip_and_errors() {
        let l = Lattice::from_gram_text("2\n8 4\n4 0\n").unwrap();
        assert_eq!(l.determinant(), (-16).into());
        assert_eq!(Lattice::from_gram_text(&l.to_gram_text()).unwrap(), l);
        assert!(matches!(
            Lattice::from_gram_text("2\n1 2\n3 4\n"),
            Err(LatticeError::NotSymmetric { row: 0, col: 1 })
        ));
        assert!(matches!(Lattice::from_gram_text("2\n1 2\n"), Err(LatticeError::GramFile(_))));
        assert!(matches!(Lattice::from_gram_text("x"), Err(LatticeError::GramFile(_))));
    }
}
