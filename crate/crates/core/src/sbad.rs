//! Rank-one extensions `S ⊂ S1 = <S, D>` and the determinant test for
//! S-bad Picard lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{LatticeError, Result};
use crate::glue::normalize_label;
use crate::lattice::Lattice;

/// `S` together with the pairings of an extra vector `D` against the `S`
/// basis and `D`'s own norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionWitness {
    pub s: Lattice,
    pub pairings: Vec<BigInt>,
    pub d_norm: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SbadVerdict {
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub det_s: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub det_s1: BigInt,
    pub signature_s1: (usize, usize),
    pub sbad: bool,
}

impl ExtensionWitness {
    pub fn new(s: Lattice, pairings: Vec<BigInt>, d_norm: BigInt) -> Result<Self> {
        if pairings.len() != s.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: s.rank(),
                got: pairings.len(),
            });
        }
        Ok(Self { s, pairings, d_norm })
    }

    /// Split a bordered gram matrix: the last row and column describe `D`.
    pub fn from_bordered(s1: &Lattice) -> Result<Self> {
        let r = s1.rank();
        if r < 2 {
            return Err(LatticeError::InvalidArgument(
                "bordered gram needs rank at least 2".into(),
            ));
        }
        let g = s1.gram();
        let s_gram = g[..r - 1].iter().map(|row| row[..r - 1].to_vec()).collect();
        let pairings = g[r - 1][..r - 1].to_vec();
        Self::new(Lattice::new(s_gram)?, pairings, g[r - 1][r - 1].clone())
    }

    pub fn s1_gram(&self) -> Vec<Vec<BigInt>> {
        let mut g: Vec<Vec<BigInt>> = self
            .s
            .gram()
            .iter()
            .zip(&self.pairings)
            .map(|(row, p)| {
                let mut r = row.clone();
                r.push(p.clone());
                r
            })
            .collect();
        let mut last = self.pairings.clone();
        last.push(self.d_norm.clone());
        g.push(last);
        g
    }

    pub fn s1(&self) -> Lattice {
        Lattice::new(self.s1_gram()).expect("bordering keeps symmetry")
    }
}

/// `S1` is S-bad when it is nondegenerate of signature `(1, rank S)` and
/// `|det S1| <= 2 |det S|`.
pub fn is_sbad_extension(w: &ExtensionWitness) -> Result<SbadVerdict> {
    let det_s = w.s.determinant();
    if det_s.is_zero() {
        return Err(LatticeError::Degenerate);
    }
    let s1 = w.s1();
    let det_s1 = s1.determinant();
    if det_s1.is_zero() {
        return Err(LatticeError::DegenerateExtension);
    }
    let signature_s1 = s1.signature()?;
    let sbad = signature_s1 == (1, w.s.rank()) && det_s1.abs() <= det_s.abs() * 2;
    Ok(SbadVerdict {
        det_s,
        det_s1,
        signature_s1,
        sbad,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarizedCheck {
    pub n: i64,
    pub d_norm: i64,
    pub k: i64,
    /// `d_norm - k^2/2n`, the norm of the projection of `D` to `S^⊥`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub projected: BigRational,
    pub bad: bool,
}

/// `-2 <= d_norm - k^2/2n < 0` for a degree `k` vector `D` against a
/// polarization of norm `2n`.
pub fn polarized_check(n: i64, d_norm: i64, k: i64) -> Result<PolarizedCheck> {
    if n <= 0 {
        return Err(LatticeError::InvalidArgument(format!("n must be positive, got {n}")));
    }
    let projected = BigRational::from_integer(d_norm.into())
        - BigRational::new(BigInt::from(k) * k, BigInt::from(2 * n));
    let bad = projected >= BigRational::from_integer((-2).into()) && projected.is_negative();
    Ok(PolarizedCheck {
        n,
        d_norm,
        k,
        projected,
        bad,
    })
}

pub fn polarized_bad(n: i64, d_norm: i64, k: i64) -> Result<bool> {
    polarized_check(n, d_norm, k).map(|c| c.bad)
}

/// Reduce a degree `k` mod `2n` into `0..=n`.
pub fn normalize_degree(n: i64, k: i64) -> Result<i64> {
    if n <= 0 {
        return Err(LatticeError::InvalidArgument(format!("n must be positive, got {n}")));
    }
    Ok(normalize_label(2 * n, k))
}

/// Even `d` with `-2 <= d - k^2/two_n < 0`.
pub fn possible_extension_norms(two_n: i64, k: i64) -> Result<Vec<i64>> {
    if two_n <= 0 || two_n % 2 != 0 {
        return Err(LatticeError::InvalidArgument(format!(
            "2n must be positive and even, got {two_n}"
        )));
    }
    let shift = BigRational::new((k * k).into(), two_n.into());
    let lo = (&shift - BigRational::from_integer(2.into())).ceil().to_integer();
    let lo = i64::try_from(lo).expect("small");
    let lo = if lo % 2 == 0 { lo } else { lo + 1 };
    Ok((lo..)
        .step_by(2)
        .take_while(|&d| BigRational::from_integer(d.into()) < shift)
        .collect())
}

/// Bounded witness search: every pairing vector with entries in
/// `[-pairing_bound, pairing_bound]` and every even `D` norm in
/// `norm_range`, keeping the S-bad ones. Degenerate borderings are skipped.
pub fn search_sbad_extensions(
    s: &Lattice,
    pairing_bound: i64,
    norm_range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<(ExtensionWitness, SbadVerdict)>> {
    if s.determinant().is_zero() {
        return Err(LatticeError::Degenerate);
    }
    let r = s.rank();
    let width = (2 * pairing_bound + 1) as usize;
    let total = width.checked_pow(r as u32).ok_or_else(|| {
        LatticeError::InvalidArgument("search grid too large".into())
    })?;
    let mut found = Vec::new();
    for idx in 0..total {
        let mut rem = idx;
        let pairings: Vec<BigInt> = (0..r)
            .map(|_| {
                let v = (rem % width) as i64 - pairing_bound;
                rem /= width;
                BigInt::from(v)
            })
            .collect();
        for d in norm_range.clone().filter(|d| d % 2 == 0) {
            let w = ExtensionWitness::new(s.clone(), pairings.clone(), d.into())?;
            match is_sbad_extension(&w) {
                Ok(v) if v.sbad => found.push((w, v)),
                Ok(_) | Err(LatticeError::DegenerateExtension) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness(s: &[&[i64]], pairings: &[i64], d: i64) -> ExtensionWitness {
        ExtensionWitness::new(
            Lattice::from_i64(s).unwrap(),
            pairings.iter().map(|&p| p.into()).collect(),
            d.into(),
        )
        .unwrap()
    }

    #[test]
    fn degree_eight_fibre_class() {
        let w = witness(&[&[8]], &[4], 0);
        assert_eq!(w.s1_gram(), Lattice::from_i64(&[&[8, 4], &[4, 0]]).unwrap().gram().clone());
        let v = is_sbad_extension(&w).unwrap();
        assert_eq!(v.det_s1, BigInt::from(-16));
        assert!(v.sbad);
    }

    #[test]
    fn orthogonal_root_is_bad() {
        let v = is_sbad_extension(&witness(&[&[2]], &[0], -2)).unwrap();
        assert_eq!(v.det_s1, BigInt::from(-4));
        assert!(v.sbad);
        let v = is_sbad_extension(&witness(&[&[2]], &[0], -6)).unwrap();
        assert_eq!(v.det_s1, BigInt::from(-12));
        assert!(!v.sbad);
    }

    #[test]
    fn degenerate_extension_reported() {
        assert_eq!(
            is_sbad_extension(&witness(&[&[2]], &[2], 2)),
            Err(LatticeError::DegenerateExtension)
        );
    }

    #[test]
    fn wrong_signature_is_not_bad() {
        // positive D orthogonal to S gives signature (2, 0)
        let v = is_sbad_extension(&witness(&[&[2]], &[0], 2)).unwrap();
        assert_eq!(v.signature_s1, (2, 0));
        assert!(!v.sbad);
    }

    #[test]
    fn polarized_examples() {
        assert!(polarized_bad(1, -2, 0).unwrap());
        assert!(polarized_bad(4, 0, 4).unwrap());
        assert!(!polarized_bad(2, 2, 1).unwrap());
        assert!(polarized_bad(0, 0, 0).is_err());
    }

    #[test]
    fn degree_normalization() {
        assert_eq!(normalize_degree(3, 7).unwrap(), 1);
        assert_eq!(normalize_degree(3, -1).unwrap(), 1);
        assert_eq!(normalize_degree(5, 5).unwrap(), 5);
    }

    #[test]
    fn extension_norms() {
        assert_eq!(possible_extension_norms(4, 1).unwrap(), vec![0]);
        assert_eq!(possible_extension_norms(2, 0).unwrap(), vec![-2]);
        assert_eq!(possible_extension_norms(12, 5).unwrap(), vec![2]);
        assert!(possible_extension_norms(3, 1).is_err());
    }

    #[test]
    fn bordered_file_roundtrip() {
        let s1 = Lattice::from_gram_text("2\n8 4\n4 0\n").unwrap();
        let w = ExtensionWitness::from_bordered(&s1).unwrap();
        assert_eq!(w.s.gram(), &vec![vec![BigInt::from(8)]]);
        assert_eq!(w.pairings, vec![BigInt::from(4)]);
        assert_eq!(w.s1(), s1);
    }

    #[test]
    fn bounded_search_finds_fibre() {
        let s = Lattice::rank1(8);
        let hits = search_sbad_extensions(&s, 4, -2..=0).unwrap();
        assert!(hits
            .iter()
            .any(|(w, _)| w.pairings == vec![BigInt::from(4)] && w.d_norm.is_zero()));
        assert!(hits.iter().all(|(_, v)| v.sbad));
    }
}
