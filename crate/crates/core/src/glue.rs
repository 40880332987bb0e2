//! Glue between `<v>` and `U = v^⊥` inside E8, counts of short dual-coset
//! vectors, and the divisor data of the restricted weight-12 form.
//!
//! Norms are stored in the positive convention (E8 positive definite). The
//! negative-definite convention used for `-E8` is applied by the report
//! layer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::e8::{self, E8Vector, OrbitClass};
use crate::enumerate::{enumerate, for_each_vector, root_count, EnumQuery, NormHistogram};
use crate::error::{LatticeError, Result};
use crate::lattice::{Lattice, RationalVector};
use crate::matrix;

/// Dimension of `II(2,26)`.
pub const TARGET_DIM: usize = 28;
/// Weight of the form on `II(2,26)` before restriction.
pub const BASE_WEIGHT: u64 = 12;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Reduce a glue label mod `2n` into `0..=n` using `k ~ -k`.
pub fn normalize_label(two_n: i64, k: i64) -> i64 {
    let n = two_n / 2;
    let mut r = k.rem_euclid(two_n);
    if r > n {
        r -= two_n;
    }
    r.abs()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub rank: usize,
    pub negative_index: usize,
    /// Minimal number of generators of the discriminant group.
    pub discriminant_length: usize,
    pub target_dim: usize,
    pub embeddable: bool,
}

/// Sufficient condition for a primitive embedding of a signature `(2, q)`
/// lattice into `II(2,26)`: `q <= 26` and `length(T'/T) + rank(T) < 28`.
pub fn nikulin_embeddable(t: &Lattice) -> Result<EmbeddingReport> {
    let (pos, neg) = t.signature()?;
    if pos != 2 {
        return Err(LatticeError::WrongSignature {
            expected: "(2, q)".into(),
            positive: pos,
            negative: neg,
        });
    }
    let length = t.discriminant_group()?.length();
    let target_neg = TARGET_DIM - 2;
    Ok(EmbeddingReport {
        rank: t.rank(),
        negative_index: neg,
        discriminant_length: length,
        target_dim: TARGET_DIM,
        embeddable: neg <= target_neg && length + t.rank() < TARGET_DIM,
    })
}

/// `T = (-2n) ⊕ (-E8) ⊕ (-E8) ⊕ H ⊕ H`, the orthogonal complement of a degree
/// `2n` polarization in the K3 lattice. Basis order: generator of `(-2n)`,
/// sixteen `-E8` vectors, then `e1, f1, e2, f2`.
pub fn polarized_transcendental(two_n: i64) -> Lattice {
    let ne8 = Lattice::e8().rescale(-1);
    let h = Lattice::hyperbolic();
    Lattice::direct_sum_all([&Lattice::rank1(-two_n), &ne8, &ne8, &h, &h])
}

/// Counts of `a ∈ U'` with `norm(a) < 2`, bucketed by glue label and exact norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetCountTable {
    pub two_n: i64,
    pub representative: E8Vector,
    pub primitive: bool,
    pub root_count: u64,
    pub counts: BTreeMap<i64, NormHistogram>,
}

impl CosetCountTable {
    pub fn n(&self) -> i64 {
        self.two_n / 2
    }

    pub fn column_total(&self, k: i64) -> u64 {
        self.counts.get(&k).map_or(0, NormHistogram::total)
    }

    /// Totals for `k = 0..=n`, the layout of one table row.
    pub fn column_totals(&self) -> Vec<u64> {
        (0..=self.n()).map(|k| self.column_total(k)).collect()
    }

    /// Count at any label (reduced by `k ~ 2n - k ~ -k`) and internal norm.
    pub fn cell(&self, k: i64, norm: &BigRational) -> u64 {
        let k = normalize_label(self.two_n, k);
        self.counts.get(&k).map_or(0, |h| h.get(norm))
    }
}

fn label_bound(two_n: i64, k: i64) -> BigRational {
    rat(k * k, two_n) + rat(2, 1)
}

/// Primary path: enumerate `x ∈ E8` with `(x,v) = k` and
/// `(x,x) < k^2/2n + 2`, and bucket the projections `x - (k/2n) v`.
pub fn coset_counts_by_e8(v: &E8Vector, labels: &[i64]) -> Result<BTreeMap<i64, NormHistogram>> {
    let g = e8::gram();
    let two_n = e8::norm(&g, v);
    if two_n == 0 {
        return Err(LatticeError::ZeroVector);
    }
    let mut raw: BTreeMap<i64, BTreeMap<i64, u64>> =
        labels.iter().map(|&k| (k, BTreeMap::new())).collect();
    let Some(bound) = labels.iter().map(|&k| label_bound(two_n, k)).max() else {
        return Ok(BTreeMap::new());
    };
    let query = EnumQuery::new(Lattice::e8().gram().clone(), bound).exclusive();
    for_each_vector(&query, |x| {
        let k = e8::pairing(&g, x, v);
        if let Some(bucket) = raw.get_mut(&k) {
            let nx = e8::norm(&g, x);
            // (x,x) < k^2/2n + 2  <=>  2n (x,x) < k^2 + 4n
            if two_n * nx < k * k + 2 * two_n {
                *bucket.entry(nx).or_insert(0) += 1;
            }
        }
    })?;
    Ok(raw
        .into_iter()
        .map(|(k, by_norm)| {
            let mut h = NormHistogram::default();
            for (nx, c) in by_norm {
                h.add(rat(nx * two_n - k * k, two_n), c);
            }
            (k, h)
        })
        .collect())
}

pub fn coset_count_row(orbit: &OrbitClass) -> Result<CosetCountTable> {
    let labels: Vec<i64> = (0..=orbit.two_n / 2).collect();
    Ok(CosetCountTable {
        two_n: orbit.two_n,
        representative: orbit.representative,
        primitive: orbit.primitive,
        root_count: orbit.root_count,
        counts: coset_counts_by_e8(&orbit.representative, &labels)?,
    })
}

/// Some `x ∈ Z^r` with `x · h = target`, by iterated extended gcd.
fn solve_linear_form(h: &[i64], target: i64) -> Option<Vec<i64>> {
    let mut coeffs = vec![0i64; h.len()];
    let mut g = 0i64;
    for (i, &hi) in h.iter().enumerate() {
        if hi == 0 {
            continue;
        }
        if g == 0 {
            g = hi;
            coeffs[i] = 1;
            continue;
        }
        let e = g.extended_gcd(&hi);
        for c in coeffs.iter_mut() {
            *c *= e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
    }
    if g == 0 || target % g != 0 {
        return None;
    }
    let f = target / g;
    Some(coeffs.into_iter().map(|c| c * f).collect())
}

/// Independent path: enumerate the rank-7 coset `a0 + U` of `U'` directly,
/// where `a0` is the projection of some `x0 ∈ E8` with `(x0,v) = k`.
pub fn coset_counts_by_dual(v: &E8Vector, labels: &[i64]) -> Result<BTreeMap<i64, NormHistogram>> {
    let g = e8::gram();
    let m = v.iter().fold(0i64, |acc, &c| acc.gcd(&c));
    if m == 0 {
        return Err(LatticeError::ZeroVector);
    }
    let w: Vec<i64> = v.iter().map(|c| c / m).collect();
    let u = e8::complement_of(v)?;
    let u_gram = u.gram().clone();
    let u_basis = &u.embedding().expect("complement is embedded").basis;
    let gw = e8::simple_pairings(&g, &w);
    let mut out = BTreeMap::new();
    for &k in labels {
        if k % m != 0 {
            out.insert(k, NormHistogram::default());
            continue;
        }
        let x0 = solve_linear_form(&gw, k / m).expect("w is primitive in a unimodular lattice");
        let x0_big: Vec<BigInt> = x0.iter().map(|&c| BigInt::from(c)).collect();
        let pairings: Vec<BigInt> = u_basis
            .iter()
            .map(|row| Lattice::e8().pairing(row, &x0_big))
            .collect();
        let inv = matrix::rational_inverse(&u_gram).ok_or(LatticeError::Degenerate)?;
        let offset: Vec<BigRational> = inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&pairings)
                    .map(|(a, b)| a * BigRational::from_integer(b.clone()))
                    .sum()
            })
            .collect();
        let query = EnumQuery::new(u_gram.clone(), rat(2, 1))
            .with_offset(offset)
            .exclusive();
        out.insert(k, enumerate(&query)?.histogram);
    }
    Ok(out)
}

pub fn coset_count_row_via_dual(orbit: &OrbitClass) -> Result<CosetCountTable> {
    let labels: Vec<i64> = (0..=orbit.two_n / 2).collect();
    Ok(CosetCountTable {
        two_n: orbit.two_n,
        representative: orbit.representative,
        primitive: orbit.primitive,
        root_count: orbit.root_count,
        counts: coset_counts_by_dual(&orbit.representative, &labels)?,
    })
}

/// Weight of the restricted form: 12 plus half the number of roots of `U`.
pub fn restricted_weight(u: &Lattice) -> Result<u64> {
    if u.rank() > TARGET_DIM - 2 {
        return Err(LatticeError::InvalidArgument(format!(
            "rank {} exceeds 26",
            u.rank()
        )));
    }
    let roots = root_count(u)?;
    Ok(BASE_WEIGHT + roots / 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorClass {
    pub k: i64,
    /// Norm of the `U'` vectors in the cell, negative convention.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub norm: BigRational,
    /// Norm of the matching `T'` vectors, `-2 - norm`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub t_norm: BigRational,
    pub count: u64,
    pub vanishing: bool,
}

/// Every cell with norm strictly between -2 and 0, including the empty ones.
pub fn divisor_classes(row: &CosetCountTable) -> Vec<DivisorClass> {
    let two_n = row.two_n;
    let mut out = Vec::new();
    for k in 0..=row.n() {
        // the only admissible internal norm in (0, 2) is e - k^2/2n for the
        // least even e above k^2/2n
        let shift = rat(k * k, two_n);
        let even = (&shift / rat(2, 1)).floor().to_integer() * 2 + 2;
        let nu = BigRational::from_integer(even) - &shift;
        if nu >= rat(2, 1) {
            continue;
        }
        let count = row.cell(k, &nu);
        out.push(DivisorClass {
            k,
            norm: -nu.clone(),
            t_norm: nu - rat(2, 1),
            count,
            vanishing: count > 0,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contribution {
    pub scale: i64,
    /// Norm of `scale * t0`, negative convention.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub norm: BigRational,
    pub label: i64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorReport {
    pub two_n: i64,
    pub label: i64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub norm: BigRational,
    /// `t0` in the basis of [`polarized_transcendental`].
    #[serde(serialize_with = "crate::report::ser_rational_vec")]
    pub t0: RationalVector,
    pub contributions: Vec<Contribution>,
    pub total_multiplicity: u64,
}

/// Dual vector of `T = (-2n) ⊕ (-E8)^2 ⊕ H^2` with glue label `k` and
/// (negative) norm `norm`: `(k/2n) g + e2 + m f2`. Primitive in `T'` since the
/// `e2` coefficient is 1.
pub fn dual_direction(two_n: i64, k: i64, norm: &BigRational) -> Result<RationalVector> {
    let lift = norm + rat(k * k, two_n);
    if !lift.is_integer() || lift.to_integer().is_odd() {
        return Err(LatticeError::InvalidArgument(format!(
            "no vector of T' with label {k} has norm {norm}"
        )));
    }
    let m = lift.to_integer() / 2;
    let mut coords = vec![BigRational::zero(); 21];
    coords[0] = rat(k, two_n);
    coords[19] = BigRational::one();
    coords[20] = BigRational::from_integer(m);
    Ok(RationalVector::new(coords))
}

/// Vanishing order along `t0^⊥`: over scales `c >= 1` with
/// `c^2 |norm(t0)| <= 2`, add the number of `a ∈ U'` with label `c k0` and
/// `norm(a) = -2 - c^2 norm(t0)`. The `c` with `c t0` a norm -2 vector of `T`
/// picks up the zero vector of `U` (the root itself).
pub fn hyperplane_multiplicity(row: &CosetCountTable, k0: i64, norm0: &BigRational) -> Result<DivisorReport> {
    let minus_two = rat(-2, 1);
    if !norm0.is_negative() || *norm0 < minus_two {
        return Err(LatticeError::NormOutOfRange(norm0.clone()));
    }
    let t0 = dual_direction(row.two_n, k0, norm0)?;
    let t_lattice = polarized_transcendental(row.two_n);
    debug_assert_eq!(t_lattice.rational_norm(&t0), *norm0);
    let mut contributions = Vec::new();
    let mut c = 1i64;
    loop {
        let scaled = norm0 * BigRational::from_integer((c * c).into());
        if scaled < minus_two {
            break;
        }
        let label = normalize_label(row.two_n, c * k0);
        let a_norm = rat(2, 1) + &scaled;
        let count = row.cell(label, &a_norm);
        contributions.push(Contribution {
            scale: c,
            norm: scaled,
            label,
            count,
        });
        c += 1;
    }
    let total_multiplicity = contributions.iter().map(|c| c.count).sum();
    Ok(DivisorReport {
        two_n: row.two_n,
        label: normalize_label(row.two_n, k0),
        norm: norm0.clone(),
        t0,
        contributions,
        total_multiplicity,
    })
}

/// Lines of `T'` on which the restricted form can vanish: one per divisor
/// class cell, plus the norm -2 line at label 0.
pub fn class_lines(row: &CosetCountTable) -> Vec<(i64, BigRational)> {
    let mut lines = vec![(0, rat(-2, 1))];
    for class in divisor_classes(row) {
        lines.push((class.k, class.t_norm));
    }
    lines
}

/// Unimodular Lorentzian lattices inside `II(3,19)` and determinant-2
/// lattices of rank `1 mod 8`.
pub fn nikulin_minus2_property(s: &Lattice) -> Result<bool> {
    let (pos, neg) = s.signature()?;
    if pos != 1 {
        return Err(LatticeError::WrongSignature {
            expected: "(1, m)".into(),
            positive: pos,
            negative: neg,
        });
    }
    if !s.is_even() || neg > 19 {
        return Ok(false);
    }
    let det = s.determinant().abs();
    Ok(det.is_one() || (det == BigInt::from(2) && s.rank() % 8 == 1))
}

/// Integer value of a rational known to be integral, for reports.
pub fn as_i64(q: &BigRational) -> Option<i64> {
    q.is_integer().then(|| q.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit(two_n: i64, roots: u64) -> OrbitClass {
        e8::orbits_of_norm(two_n)
            .unwrap()
            .into_iter()
            .find(|o| o.root_count == roots)
            .unwrap()
    }

    #[test]
    fn labels_normalize() {
        assert_eq!(normalize_label(6, 7), 1);
        assert_eq!(normalize_label(6, -1), 1);
        assert_eq!(normalize_label(10, 5), 5);
        assert_eq!(normalize_label(10, 6), 4);
        assert_eq!(normalize_label(2, 2), 0);
    }

    #[test]
    fn linear_form_solver() {
        let h = [4, 6, 9];
        let x = solve_linear_form(&h, 1).unwrap();
        assert_eq!(x.iter().zip(&h).map(|(a, b)| a * b).sum::<i64>(), 1);
        assert!(solve_linear_form(&[2, 4], 1).is_none());
    }

    #[test]
    fn norm_two_row() {
        let row = coset_count_row(&orbit(2, 126)).unwrap();
        assert_eq!(row.column_totals(), vec![1, 56]);
        assert_eq!(row.counts[&1].get(&rat(3, 2)), 56);
    }

    #[test]
    fn non_primitive_row() {
        let o = orbit(8, 126);
        assert!(!o.primitive);
        let row = coset_count_row(&o).unwrap();
        assert_eq!(row.column_totals(), vec![1, 0, 56, 0, 1]);
    }

    #[test]
    fn weights() {
        assert_eq!(restricted_weight(&Lattice::e7().rescale(-1)).unwrap(), 75);
        assert_eq!(restricted_weight(&Lattice::rank1(4)).unwrap(), 12);
        assert_eq!(restricted_weight(&Lattice::hyperbolic()), Err(LatticeError::Indefinite));
    }

    #[test]
    fn divisor_classes_for_norm_two() {
        let row = coset_count_row(&orbit(2, 126)).unwrap();
        let classes = divisor_classes(&row);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].k, 1);
        assert_eq!(classes[0].norm, rat(-3, 2));
        assert_eq!(classes[0].count, 56);
        assert!(classes[0].vanishing);
    }

    #[test]
    fn example_multiplicities() {
        let row = coset_count_row(&orbit(2, 126)).unwrap();
        let e2 = hyperplane_multiplicity(&row, 1, &rat(-1, 2)).unwrap();
        assert_eq!(e2.total_multiplicity, 57);
        assert_eq!(e2.contributions.len(), 2);
        let e1 = hyperplane_multiplicity(&row, 0, &rat(-2, 1)).unwrap();
        assert_eq!(e1.total_multiplicity, 1);
        assert!(matches!(
            hyperplane_multiplicity(&row, 1, &rat(-5, 2)),
            Err(LatticeError::NormOutOfRange(_))
        ));
        assert!(matches!(
            hyperplane_multiplicity(&row, 1, &rat(0, 1)),
            Err(LatticeError::NormOutOfRange(_))
        ));
    }

    #[test]
    fn embedding_conditions() {
        for two_n in (2..=14).step_by(2) {
            let r = nikulin_embeddable(&polarized_transcendental(two_n)).unwrap();
            assert!(r.embeddable, "2n = {two_n}");
            assert_eq!(r.rank, 21);
        }
        let h = Lattice::hyperbolic();
        let m2 = Lattice::rank1(-2);
        let mut parts = vec![&h, &h];
        parts.extend(std::iter::repeat_n(&m2, 24));
        let synthetic = Lattice::direct_sum_all(parts);
        let r = nikulin_embeddable(&synthetic).unwrap();
        assert_eq!(r.rank, 28);
        assert!(!r.embeddable);
        assert!(matches!(
            nikulin_embeddable(&Lattice::e8()),
            Err(LatticeError::WrongSignature { .. })
        ));
    }

    #[test]
    fn minus_two_property() {
        let ne8 = Lattice::e8().rescale(-1);
        assert!(nikulin_minus2_property(&Lattice::unimodular(1, 17).unwrap()).unwrap());
        assert!(nikulin_minus2_property(&Lattice::rank1(2).direct_sum(&ne8)).unwrap());
        assert!(!nikulin_minus2_property(&Lattice::rank1(4)).unwrap());
        assert!(nikulin_minus2_property(&Lattice::e8()).is_err());
    }
}
