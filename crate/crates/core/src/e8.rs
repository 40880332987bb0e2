//! E8 in the Bourbaki simple-root basis: Weyl reflections, dominant
//! representatives, orbits of a given norm and their orthogonal complements.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::enumerate::{for_each_vector, root_count, EnumQuery};
use crate::error::{LatticeError, Result};
use crate::lattice::Lattice;

pub const RANK: usize = 8;

/// Highest root in simple-root coordinates.
pub const HIGHEST_ROOT: [i64; RANK] = [2, 3, 4, 6, 5, 4, 3, 2];

pub type E8Vector = [i64; RANK];

pub fn gram() -> [[i64; RANK]; RANK] {
    let mut g = [[0i64; RANK]; RANK];
    let l = Lattice::e8();
    for (i, row) in l.gram().iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            g[i][j] = i64::try_from(v).expect("small");
        }
    }
    g
}

/// Pairings of `x` with each simple root.
pub fn simple_pairings(g: &[[i64; RANK]; RANK], x: &[i64]) -> E8Vector {
    let mut p = [0i64; RANK];
    for (i, row) in g.iter().enumerate() {
        p[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
    }
    p
}

pub fn pairing(g: &[[i64; RANK]; RANK], x: &[i64], y: &[i64]) -> i64 {
    simple_pairings(g, y).iter().zip(x).map(|(a, b)| a * b).sum()
}

pub fn norm(g: &[[i64; RANK]; RANK], x: &[i64]) -> i64 {
    pairing(g, x, x)
}

/// Reflection in simple root `i`.
pub fn reflect(g: &[[i64; RANK]; RANK], x: &mut E8Vector, i: usize) {
    let p: i64 = g[i].iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    x[i] -= p;
}

fn to_array(x: &[i64]) -> Result<E8Vector> {
    x.try_into().map_err(|_| LatticeError::DimensionMismatch {
        expected: RANK,
        got: x.len(),
    })
}

/// The Weyl-orbit representative with nonnegative pairing against every simple
/// root. Reflects at the lowest-index simple root with negative pairing until
/// none is left.
pub fn dominant_representative(x: &[i64]) -> Result<E8Vector> {
    let mut v = to_array(x)?;
    if v.iter().all(|&c| c == 0) {
        return Err(LatticeError::ZeroVector);
    }
    let g = gram();
    loop {
        let p = simple_pairings(&g, &v);
        match p.iter().position(|&c| c < 0) {
            Some(i) => v[i] -= p[i],
            None => return Ok(v),
        }
    }
}

fn content(x: &[i64]) -> i64 {
    x.iter().fold(0i64, |acc, &c| acc.gcd(&c))
}

/// `v^⊥ ∩ E8`, with the Hermite-form basis of the kernel. A non-primitive `v`
/// has the same complement as its primitive part.
pub fn complement_of(v: &[i64]) -> Result<Lattice> {
    let v = to_array(v)?;
    let c = content(&v);
    if c == 0 {
        return Err(LatticeError::ZeroVector);
    }
    let primitive: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x / c)).collect();
    Lattice::e8().complement_of_basis(&[primitive])
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitClass {
    pub two_n: i64,
    pub representative: E8Vector,
    pub primitive: bool,
    pub orbit_size: u64,
    #[serde(skip)]
    pub complement: Lattice,
    pub root_count: u64,
}

impl OrbitClass {
    pub fn from_representative(representative: E8Vector, orbit_size: u64) -> Result<Self> {
        let g = gram();
        let two_n = norm(&g, &representative);
        let complement = complement_of(&representative)?;
        let root_count = root_count(&complement)?;
        Ok(Self {
            two_n,
            representative,
            primitive: content(&representative) == 1,
            orbit_size,
            complement,
            root_count,
        })
    }

    /// Multiplicity `m` with `representative = m * (primitive vector)`.
    pub fn content(&self) -> i64 {
        content(&self.representative)
    }
}

/// All vectors of E8 with norm exactly `two_n`.
pub fn vectors_of_norm(two_n: i64) -> Result<Vec<E8Vector>> {
    let g = gram();
    let mut out = Vec::new();
    let query = EnumQuery::new(Lattice::e8().gram().clone(), BigInt::from(two_n).into());
    for_each_vector(&query, |x| {
        if norm(&g, x) == two_n {
            out.push(x.try_into().expect("rank 8"));
        }
    })?;
    Ok(out)
}

/// One class per Weyl orbit of norm-`two_n` vectors, ordered
/// lexicographically by dominant representative.
pub fn orbits_of_norm(two_n: i64) -> Result<Vec<OrbitClass>> {
    if two_n <= 0 {
        return Err(LatticeError::InvalidArgument(format!(
            "norm must be positive, got {two_n}"
        )));
    }
    if two_n % 2 != 0 {
        return Err(LatticeError::OddNorm(two_n));
    }
    let vectors = vectors_of_norm(two_n)?;
    let reps: Vec<E8Vector> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            vectors
                .par_iter()
                .map(|v| dominant_representative(v).expect("nonzero"))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            vectors
                .iter()
                .map(|v| dominant_representative(v).expect("nonzero"))
                .collect()
        }
    };
    let mut sizes: BTreeMap<E8Vector, u64> = BTreeMap::new();
    for r in reps {
        *sizes.entry(r).or_insert(0) += 1;
    }
    sizes
        .into_iter()
        .map(|(rep, size)| OrbitClass::from_representative(rep, size))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn highest_root_is_dominant() {
        let g = gram();
        assert_eq!(norm(&g, &HIGHEST_ROOT), 2);
        let p = simple_pairings(&g, &HIGHEST_ROOT);
        assert_eq!(p, [0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(dominant_representative(&HIGHEST_ROOT).unwrap(), HIGHEST_ROOT);
    }

    #[test]
    fn every_root_reduces_to_highest_root() {
        let roots = vectors_of_norm(2).unwrap();
        assert_eq!(roots.len(), 240);
        for r in &roots {
            assert_eq!(dominant_representative(r).unwrap(), HIGHEST_ROOT);
        }
    }

    #[test]
    fn negation_has_same_representative() {
        let x = [1, -2, 0, 3, 0, -1, 0, 2];
        let neg: Vec<i64> = x.iter().map(|c| -c).collect();
        assert_eq!(
            dominant_representative(&x).unwrap(),
            dominant_representative(&neg).unwrap()
        );
    }

    #[test]
    fn zero_and_odd_rejected() {
        assert_eq!(dominant_representative(&[0; 8]), Err(LatticeError::ZeroVector));
        assert!(matches!(orbits_of_norm(3), Err(LatticeError::OddNorm(3))));
        assert!(complement_of(&[0; 8]).is_err());
    }

    #[test]
    fn root_complement_is_e7_like() {
        let u = complement_of(&HIGHEST_ROOT).unwrap();
        assert_eq!(u.rank(), 7);
        assert_eq!(u.determinant(), BigInt::from(2));
        assert_eq!(root_count(&u).unwrap(), 126);
        let twice: Vec<i64> = HIGHEST_ROOT.iter().map(|c| 2 * c).collect();
        assert_eq!(complement_of(&twice).unwrap().gram(), u.gram());
    }

    #[test]
    fn norm_eight_orbits() {
        let orbits = orbits_of_norm(8).unwrap();
        assert_eq!(orbits.len(), 2);
        assert_eq!(orbits.iter().filter(|o| !o.primitive).count(), 1);
        assert_eq!(orbits.iter().map(|o| o.orbit_size).sum::<u64>(), 17520);
    }
}
