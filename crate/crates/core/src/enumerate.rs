//! Fincke-Pohst enumeration of lattice points in an ellipsoid, exactly.
//!
//! The form is written as `sum_i d_i (y_i + sum_{j>i} m_ij y_j)^2` with
//! `y = x + offset`, so the last coordinate is fixed first. After clearing
//! every denominator the search runs on integers only: the admissible range of
//! each coordinate comes from an integer square root, never from floating
//! point. The loop runs in `i128` when an a-priori magnitude bound allows it
//! and in `BigInt` otherwise.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{LatticeError, Result};
use crate::lattice::Lattice;
use crate::matrix::{self, IntMatrix, RatMatrix};

/// `gram = lower * diag(pivots) * lower^T` with `lower` unit lower triangular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCholesky {
    pub pivots: Vec<BigRational>,
    pub lower: RatMatrix,
}

impl RationalCholesky {
    /// Coefficient `m_ij` (`j > i`) in `y_i + sum_{j>i} m_ij y_j`.
    fn coefficient(&self, i: usize, j: usize) -> &BigRational {
        &self.lower[j][i]
    }
}

pub fn rational_cholesky(gram: &[Vec<BigInt>]) -> Result<RationalCholesky> {
    let n = gram.len();
    if let Some((row, col)) = matrix::is_symmetric(gram) {
        return Err(LatticeError::NotSymmetric { row, col });
    }
    let g = matrix::to_rational(gram);
    let mut pivots: Vec<BigRational> = Vec::with_capacity(n);
    let mut lower = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        lower[i][i] = BigRational::one();
        let mut d = g[i][i].clone();
        for k in 0..i {
            d -= &pivots[k] * &lower[i][k] * &lower[i][k];
        }
        if !d.is_positive() {
            return Err(LatticeError::NotPositiveDefinite { index: i, pivot: d });
        }
        for j in i + 1..n {
            let mut s = g[i][j].clone();
            for k in 0..i {
                s -= &pivots[k] * &lower[i][k] * &lower[j][k];
            }
            lower[j][i] = s / &d;
        }
        pivots.push(d);
    }
    Ok(RationalCholesky { pivots, lower })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    Inclusive,
    Exclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Collect {
    CountOnly,
    List,
}

#[derive(Debug, Clone)]
pub struct EnumQuery {
    pub gram: IntMatrix,
    pub offset: Vec<BigRational>,
    pub bound: BigRational,
    pub mode: BoundMode,
    pub collect: Collect,
}

impl EnumQuery {
    pub fn new(gram: IntMatrix, bound: BigRational) -> Self {
        let n = gram.len();
        Self {
            gram,
            offset: vec![BigRational::zero(); n],
            bound,
            mode: BoundMode::Inclusive,
            collect: Collect::CountOnly,
        }
    }

    pub fn with_offset(mut self, offset: Vec<BigRational>) -> Self {
        self.offset = offset;
        self
    }

    pub fn exclusive(mut self) -> Self {
        self.mode = BoundMode::Exclusive;
        self
    }

    pub fn listing(mut self) -> Self {
        self.collect = Collect::List;
        self
    }
}

/// Exact norm value -> number of points with that norm.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormHistogram {
    pub counts: BTreeMap<BigRational, u64>,
}

impl NormHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, norm: &BigRational) -> u64 {
        self.counts.get(norm).copied().unwrap_or(0)
    }

    pub fn get_int(&self, norm: i64) -> u64 {
        self.get(&BigRational::from_integer(norm.into()))
    }

    pub fn add(&mut self, norm: BigRational, count: u64) {
        if count > 0 {
            *self.counts.entry(norm).or_insert(0) += count;
        }
    }

    pub fn merge(&mut self, other: &NormHistogram) {
        for (k, v) in &other.counts {
            self.add(k.clone(), *v);
        }
    }

    /// Every bucket of `self` is present in `other` with at least that count.
    pub fn is_sub_histogram_of(&self, other: &NormHistogram) -> bool {
        self.counts.iter().all(|(k, v)| other.get(k) >= *v)
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub histogram: NormHistogram,
    /// Present in listing mode; lexicographically sorted.
    pub vectors: Option<Vec<Vec<i64>>>,
}

trait Scalar: Integer + Signed + Roots + Clone + Debug + Send + Sync {
    fn from_big(b: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
    fn to_coord(&self) -> i64;
}

impl Scalar for i128 {
    fn from_big(b: &BigInt) -> Self {
        b.to_i128().expect("magnitude checked before choosing i128")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn to_coord(&self) -> i64 {
        i64::try_from(*self).expect("coordinate exceeds i64")
    }
}

impl Scalar for BigInt {
    fn from_big(b: &BigInt) -> Self {
        b.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn to_coord(&self) -> i64 {
        self.to_i64().expect("coordinate exceeds i64")
    }
}

fn ceil_div<S: Scalar>(a: &S, b: &S) -> S {
    -((-a.clone()).div_floor(b))
}

/// Fully integral form of a query.
struct Plan<S> {
    n: usize,
    weight: Vec<S>,
    row_den: Vec<S>,
    coeff: Vec<Vec<S>>,
    offset_den: S,
    offset_num: Vec<S>,
    budget: S,
    scale: BigInt,
}

/// Same data as [`Plan`] before choosing the scalar type.
struct BigPlan {
    weight: Vec<BigInt>,
    row_den: Vec<BigInt>,
    coeff: Vec<Vec<BigInt>>,
    offset_den: BigInt,
    offset_num: Vec<BigInt>,
    budget: BigInt,
    scale: BigInt,
    magnitude: BigInt,
}

fn big_plan(q: &EnumQuery) -> Result<Option<BigPlan>> {
    let n = q.gram.len();
    if q.offset.len() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            got: q.offset.len(),
        });
    }
    let chol = rational_cholesky(&q.gram)?;
    if q.bound.is_negative() {
        return Ok(None);
    }

    let mut row_den = Vec::with_capacity(n);
    let mut coeff = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        let den = (i + 1..n).fold(BigInt::one(), |acc, j| acc.lcm(chol.coefficient(i, j).denom()));
        for j in i + 1..n {
            let c = chol.coefficient(i, j) * BigRational::from_integer(den.clone());
            coeff[i][j] = c.to_integer();
        }
        row_den.push(den);
    }
    let offset_den = q
        .offset
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let offset_num: Vec<BigInt> = q
        .offset
        .iter()
        .map(|c| (c * BigRational::from_integer(offset_den.clone())).to_integer())
        .collect();

    let level_weights: Vec<BigRational> = (0..n)
        .map(|i| {
            let d = &row_den[i] * &offset_den;
            &chol.pivots[i] / BigRational::from_integer(&d * &d)
        })
        .collect();
    let scale = level_weights
        .iter()
        .fold(q.bound.denom().clone(), |acc, w| acc.lcm(w.denom()));
    let scale_q = BigRational::from_integer(scale.clone());
    let weight: Vec<BigInt> = level_weights
        .iter()
        .map(|w| (w * &scale_q).to_integer())
        .collect();
    let mut budget = (&q.bound * &scale_q).to_integer();
    if q.mode == BoundMode::Exclusive {
        budget -= 1;
    }
    if budget.is_negative() {
        return Ok(None);
    }

    // |y_i|^2 <= bound * (G^-1)_ii bounds every coordinate that can occur
    let inv = matrix::rational_inverse(&q.gram).ok_or(LatticeError::Degenerate)?;
    let mut coord_max = BigInt::zero();
    for i in 0..n {
        let r = (&q.bound * &inv[i][i]).ceil().to_integer();
        let x = r.sqrt() + 2 + q.offset[i].abs().ceil().to_integer();
        coord_max = coord_max.max(x);
    }
    let z_max = &offset_den * &coord_max + offset_num.iter().map(Signed::abs).max().unwrap_or_default();
    let mut magnitude: BigInt = budget.clone() + 1;
    for i in 0..n {
        let s_max: BigInt = coeff[i].iter().map(|c| c.abs() * &z_max).sum();
        let a_max = &row_den[i] * &z_max + &s_max + &row_den[i] * &offset_den * BigInt::from(2);
        magnitude = magnitude
            .max(&weight[i] * &a_max * &a_max)
            .max(a_max.clone() * &a_max);
    }
    Ok(Some(BigPlan {
        weight,
        row_den,
        coeff,
        offset_den,
        offset_num,
        budget,
        scale,
        magnitude,
    }))
}

impl<S: Scalar> Plan<S> {
    fn from_big(p: &BigPlan) -> Self {
        let conv = |v: &[BigInt]| v.iter().map(S::from_big).collect::<Vec<S>>();
        Self {
            n: p.weight.len(),
            weight: conv(&p.weight),
            row_den: conv(&p.row_den),
            coeff: p.coeff.iter().map(|r| conv(r)).collect(),
            offset_den: S::from_big(&p.offset_den),
            offset_num: conv(&p.offset_num),
            budget: S::from_big(&p.budget),
            scale: p.scale.clone(),
        }
    }

    /// Integer range of coordinate `i` given the coordinates above it.
    fn range(&self, i: usize, remaining: &S, z: &[S]) -> Option<(S, S)> {
        let mut shift = S::zero();
        for j in i + 1..self.n {
            if !self.coeff[i][j].is_zero() {
                shift = shift + self.coeff[i][j].clone() * z[j].clone();
            }
        }
        let radius = (remaining.clone().div_floor(&self.weight[i])).sqrt();
        let base = shift + self.row_den[i].clone() * self.offset_num[i].clone();
        let step = self.row_den[i].clone() * self.offset_den.clone();
        let lo = ceil_div(&(-radius.clone() - base.clone()), &step);
        let hi = (radius - base).div_floor(&step);
        (lo <= hi).then_some((lo, hi))
    }

    fn level_cost(&self, i: usize, xi: &S, z: &[S]) -> (S, S) {
        let zi = self.offset_den.clone() * xi.clone() + self.offset_num[i].clone();
        let mut a = self.row_den[i].clone() * zi.clone();
        for j in i + 1..self.n {
            if !self.coeff[i][j].is_zero() {
                a = a + self.coeff[i][j].clone() * z[j].clone();
            }
        }
        (zi, self.weight[i].clone() * a.clone() * a)
    }

    /// Depth-first search below level `top` (exclusive); `emit` receives the
    /// coordinates and the scaled norm.
    fn search(
        &self,
        top: usize,
        remaining: S,
        x: &mut [i64],
        z: &mut [S],
        emit: &mut dyn FnMut(&[i64], &S),
    ) {
        if top == 0 {
            let used = self.budget.clone() - remaining;
            emit(x, &used);
            return;
        }
        let i = top - 1;
        let Some((lo, hi)) = self.range(i, &remaining, z) else {
            return;
        };
        let mut xi = lo;
        while xi <= hi {
            let (zi, cost) = self.level_cost(i, &xi, z);
            if cost <= remaining {
                x[i] = xi.to_coord();
                z[i] = zi;
                self.search(i, remaining.clone() - cost, x, z, emit);
            }
            xi = xi + S::one();
        }
    }

    fn outer_values(&self) -> Vec<S> {
        if self.n == 0 {
            return Vec::new();
        }
        let z = vec![S::zero(); self.n];
        match self.range(self.n - 1, &self.budget, &z) {
            Some((lo, hi)) => {
                let mut out = Vec::new();
                let mut v = lo;
                while v <= hi {
                    out.push(v.clone());
                    v = v + S::one();
                }
                out
            }
            None => Vec::new(),
        }
    }

    fn search_from_outer(&self, xo: &S, emit: &mut dyn FnMut(&[i64], &S)) {
        let n = self.n;
        let mut x = vec![0i64; n];
        let mut z = vec![S::zero(); n];
        let (zi, cost) = self.level_cost(n - 1, xo, &z);
        if cost > self.budget {
            return;
        }
        x[n - 1] = xo.to_coord();
        z[n - 1] = zi;
        self.search(n - 1, self.budget.clone() - cost, &mut x, &mut z, emit);
    }

    fn visit(&self, emit: &mut dyn FnMut(&[i64], &S)) {
        if self.n == 0 {
            emit(&[], &S::zero());
            return;
        }
        for xo in self.outer_values() {
            self.search_from_outer(&xo, emit);
        }
    }

    fn histogram(&self) -> BTreeMap<S, u64> {
        let mut merged: BTreeMap<S, u64> = BTreeMap::new();
        let count_into = |xo: &S, h: &mut BTreeMap<S, u64>| {
            self.search_from_outer(xo, &mut |_, used| {
                *h.entry(used.clone()).or_insert(0) += 1;
            });
        };
        if self.n == 0 {
            merged.insert(S::zero(), 1);
            return merged;
        }
        let outer = self.outer_values();
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            let parts: Vec<BTreeMap<S, u64>> = outer
                .par_iter()
                .map(|xo| {
                    let mut h = BTreeMap::new();
                    count_into(xo, &mut h);
                    h
                })
                .collect();
            for part in parts {
                for (k, v) in part {
                    *merged.entry(k).or_insert(0) += v;
                }
            }
        }
        #[cfg(not(feature = "parallel"))]
        for xo in &outer {
            count_into(xo, &mut merged);
        }
        merged
    }

    fn norm_of(&self, used: &S) -> BigRational {
        BigRational::new(used.to_big(), self.scale.clone())
    }
}

fn use_machine_ints(p: &BigPlan) -> bool {
    p.magnitude.bits() < 100
}

fn scaled_to_histogram<S: Scalar>(plan: &Plan<S>, raw: BTreeMap<S, u64>) -> NormHistogram {
    let mut h = NormHistogram::default();
    for (k, v) in raw {
        h.add(plan.norm_of(&k), v);
    }
    h
}

fn run<S: Scalar>(p: &BigPlan, collect: Collect) -> Enumeration {
    let plan = Plan::<S>::from_big(p);
    match collect {
        Collect::CountOnly => Enumeration {
            histogram: scaled_to_histogram(&plan, plan.histogram()),
            vectors: None,
        },
        Collect::List => {
            let mut raw: BTreeMap<S, u64> = BTreeMap::new();
            let mut vectors = Vec::new();
            plan.visit(&mut |x, used| {
                *raw.entry(used.clone()).or_insert(0) += 1;
                vectors.push(x.to_vec());
            });
            vectors.sort();
            Enumeration {
                histogram: scaled_to_histogram(&plan, raw),
                vectors: Some(vectors),
            }
        }
    }
}

/// All lattice points `x` with `norm(x + offset)` within the bound.
pub fn enumerate(query: &EnumQuery) -> Result<Enumeration> {
    let Some(plan) = big_plan(query)? else {
        return Ok(Enumeration {
            histogram: NormHistogram::default(),
            vectors: (query.collect == Collect::List).then(Vec::new),
        });
    };
    Ok(if use_machine_ints(&plan) {
        run::<i128>(&plan, query.collect)
    } else {
        run::<BigInt>(&plan, query.collect)
    })
}

/// Calls `f` on every point in search order, without storing anything.
pub fn for_each_vector(query: &EnumQuery, mut f: impl FnMut(&[i64])) -> Result<()> {
    let Some(plan) = big_plan(query)? else {
        return Ok(());
    };
    if use_machine_ints(&plan) {
        Plan::<i128>::from_big(&plan).visit(&mut |x, _| f(x));
    } else {
        Plan::<BigInt>::from_big(&plan).visit(&mut |x, _| f(x));
    }
    Ok(())
}

/// Number of roots: norm 2 vectors of the positive definite version of a
/// definite lattice (norm -2 vectors of a negative definite one).
pub fn root_count(lattice: &Lattice) -> Result<u64> {
    let gram = lattice.definite_gram()?;
    let two = BigRational::from_integer(2.into());
    let e = enumerate(&EnumQuery::new(gram, two.clone()))?;
    Ok(e.histogram.get(&two))
}
