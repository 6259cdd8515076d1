//! Exact rational realizations of complexes in R^d: crossing tests,
//! van Kampen numbers, the extension-parity condition, and mod-2 linking.
//!
//! Maps are linear on simplices and determined by vertex images. Every
//! decision is made in exact rational arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{ComplexError, Simplex, SimplicialComplex};

pub type Rational = BigRational;

/// Redraws allowed for seeded maps and cone apexes.
pub const MAX_RETRIES: u32 = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("invalid ambient dimension {0}")]
    InvalidAmbient(usize),
    #[error("point has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("crossing test needs d+2 = {expected} points, got {found}")]
    WrongPointCount { expected: usize, found: usize },
    #[error("degenerate configuration: affine dependence is not unique with all coefficients nonzero")]
    Degenerate,
    #[error("degenerate pair {first} / {second}")]
    DegeneratePair { first: Simplex, second: Simplex },
    #[error("duplicate moment parameter {0}")]
    DuplicateParameter(i64),
    #[error("no generic map found for seed {seed} after {attempts} draws")]
    RetryBudgetExhausted { seed: u64, attempts: u32 },
    #[error("coordinate map covers {found} vertices, complex has {expected}")]
    MissingVertices { expected: usize, found: usize },
    #[error("faces do not form a mod-2 cycle: {0}")]
    NotACycle(String),
    #[error("cycle dimensions {a} + {b} must equal d - 1 = {target}")]
    LinkDimension { a: usize, b: usize, target: isize },
    #[error("cycle images intersect: {0} meets {1}")]
    NotDisjoint(String, String),
    #[error("cone apex is not in general position")]
    DegenerateApex,
    #[error("no generic apex found after {0} draws")]
    ApexBudgetExhausted(u32),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Point of R^d with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint(Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint(coords.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    /// Coordinates as exact decimal or `p/q` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }

    pub fn translated(&self, by: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&by.0).map(|(a, b)| a + b).collect())
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// How a coordinate map was shown to be generic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum GenericityCertificate {
    /// Distinct parameters on the moment curve; every d+1 points are
    /// affinely independent and every d+2 points have a full-support
    /// dependence.
    Moment { params: Vec<i64> },
    /// Random integer coordinates validated on every pair whose dimensions
    /// sum to d-1 or d.
    Seeded { seed: u64, sub_seed: u32, box_radius: i64, pairs_validated: usize },
    /// Supplied by the caller; genericity is checked at each use.
    Explicit,
}

/// Vertex id → point in R^d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalCoordMap {
    ambient: usize,
    points: Vec<RationalPoint>,
    certificate: GenericityCertificate,
}

impl RationalCoordMap {
    pub fn from_points(ambient: usize, points: Vec<RationalPoint>) -> Result<Self, GeometryError> {
        if ambient == 0 {
            return Err(GeometryError::InvalidAmbient(ambient));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != ambient) {
            return Err(GeometryError::DimensionMismatch { expected: ambient, found: p.dim() });
        }
        Ok(RationalCoordMap { ambient, points, certificate: GenericityCertificate::Explicit })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn point(&self, v: u32) -> &RationalPoint {
        &self.points[v as usize]
    }

    pub fn certificate(&self) -> &GenericityCertificate {
        &self.certificate
    }

    pub fn image(&self, s: &Simplex) -> Vec<&RationalPoint> {
        s.vertices().iter().map(|&v| self.point(v)).collect()
    }

    fn covers(&self, k: &SimplicialComplex) -> Result<(), GeometryError> {
        if self.points.len() < k.num_vertices() {
            return Err(GeometryError::MissingVertices { expected: k.num_vertices(), found: self.points.len() });
        }
        Ok(())
    }
}

/// Reduces `m` to reduced row echelon form and returns the pivot columns.
fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r][c..].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Columns are the points lifted by a trailing 1.
fn lifted_matrix(points: &[&RationalPoint]) -> Vec<Vec<Rational>> {
    let d = points.first().map_or(0, |p| p.dim());
    let mut m: Vec<Vec<Rational>> = (0..d).map(|i| points.iter().map(|p| p.0[i].clone()).collect()).collect();
    m.push(vec![Rational::one(); points.len()]);
    m
}

fn check_dims(points: &[&RationalPoint]) -> Result<usize, GeometryError> {
    let d = points.first().map_or(0, |p| p.dim());
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(GeometryError::DimensionMismatch { expected: d, found: p.dim() });
    }
    Ok(d)
}

/// Exact ring element for fraction-free elimination; `i128` overflows are
/// reported as `None` so the caller can retry in `BigInt`.
trait Exact: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn vanishes(&self) -> bool;
    /// `(a * b - c * d) / prev`, where the division is exact.
    fn fused(a: &Self, b: &Self, c: &Self, d: &Self, prev: &Self) -> Option<Self>;
}

impl Exact for i128 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn fused(a: &Self, b: &Self, c: &Self, d: &Self, prev: &Self) -> Option<Self> {
        let n = a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)?;
        debug_assert_eq!(n % prev, 0);
        Some(n / prev)
    }
}

impl Exact for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn fused(a: &Self, b: &Self, c: &Self, d: &Self, prev: &Self) -> Option<Self> {
        Some((a * b - c * d) / prev)
    }
}

/// Bareiss elimination to row echelon form. Returns the rank and whether an
/// odd number of row swaps occurred; for a nonsingular square matrix the
/// determinant is the last pivot, negated on an odd swap count.
fn bareiss<T: Exact>(m: &mut [Vec<T>]) -> Option<(usize, bool)> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = T::unit();
    let mut r = 0;
    let mut odd = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].vanishes()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            odd = !odd;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot = &top[r];
        for row in rest.iter_mut() {
            for j in c + 1..cols {
                row[j] = T::fused(&pivot[c], &row[j], &row[c], &pivot[j], &prev)?;
            }
            row[c] = T::nil();
        }
        prev = pivot[c].clone();
        r += 1;
    }
    Some((r, odd))
}

fn to_small(m: &[Vec<BigInt>]) -> Option<Vec<Vec<i128>>> {
    m.iter().map(|row| row.iter().map(ToPrimitive::to_i128).collect()).collect()
}

fn integer_rank(m: &[Vec<BigInt>]) -> usize {
    if let Some(rank) = to_small(m).and_then(|mut s| bareiss(&mut s)).map(|(r, _)| r) {
        return rank;
    }
    bareiss(&mut m.to_vec()).expect("BigInt elimination cannot overflow").0
}

fn integer_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if let Some(mut s) = to_small(&m) {
        if let Some((rank, odd)) = bareiss(&mut s) {
            let det = if rank < n { 0 } else { s[n - 1][n - 1] };
            return BigInt::from(if odd { -det } else { det });
        }
    }
    let (rank, odd) = bareiss(&mut m).expect("BigInt elimination cannot overflow");
    if rank < n {
        return BigInt::zero();
    }
    let det = m[n - 1][n - 1].clone();
    if odd {
        -det
    } else {
        det
    }
}

/// Lifted configuration `[P; 1]` scaled by the common denominator of all
/// coordinates. Uniform scaling is affine, so dependences keep their signs.
fn integer_lift(points: &[&RationalPoint]) -> Vec<Vec<BigInt>> {
    let d = points.first().map_or(0, |p| p.dim());
    let denom = points.iter().flat_map(|p| p.0.iter()).fold(BigInt::one(), |acc, c| {
        if c.denom().is_one() {
            acc
        } else {
            acc.lcm(c.denom())
        }
    });
    let mut m: Vec<Vec<BigInt>> =
        (0..d).map(|i| points.iter().map(|p| (&p.0[i] * &denom).to_integer()).collect()).collect();
    m.push(vec![BigInt::one(); points.len()]);
    m
}

pub fn affinely_independent(points: &[&RationalPoint]) -> bool {
    if points.is_empty() {
        return true;
    }
    integer_rank(&integer_lift(points)) == points.len()
}

/// The affine dependence `Σ λ_i p_i = 0`, `Σ λ_i = 0` of `d + 2` points in
/// R^d, up to a common nonzero factor: `λ_j` is the signed maximal minor of
/// the lifted matrix with column `j` deleted. Fails unless the dependence
/// is unique up to scale.
pub fn affine_dependence(points: &[&RationalPoint]) -> Result<Vec<Rational>, GeometryError> {
    let d = check_dims(points)?;
    if points.len() != d + 2 {
        return Err(GeometryError::WrongPointCount { expected: d + 2, found: points.len() });
    }
    let m = integer_lift(points);
    let lambda: Vec<BigInt> = (0..d + 2)
        .map(|j| {
            let minor = m.iter().map(|row| [&row[..j], &row[j + 1..]].concat()).collect();
            let det = integer_det(minor);
            if j % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect();
    if lambda.iter().all(Zero::is_zero) {
        return Err(GeometryError::Degenerate);
    }
    Ok(lambda.into_iter().map(Rational::from_integer).collect())
}

/// Whether the relative interiors of two simplices with `d + 2` vertices in
/// total meet. The combined points must be in general position: the unique
/// affine dependence must involve every point, otherwise `Degenerate`.
pub fn pair_crossing(sigma: &[&RationalPoint], tau: &[&RationalPoint]) -> Result<bool, GeometryError> {
    let all: Vec<&RationalPoint> = sigma.iter().chain(tau).copied().collect();
    let lambda = affine_dependence(&all)?;
    if lambda.iter().any(Zero::is_zero) {
        return Err(GeometryError::Degenerate);
    }
    let (ls, lt) = lambda.split_at(sigma.len());
    let uniform = |xs: &[Rational]| xs.iter().all(|x| x.is_positive()) || xs.iter().all(|x| x.is_negative());
    Ok(uniform(ls) && uniform(lt))
}

/// Exact test whether two closed simplices (arbitrary position) intersect.
///
/// Their convex hulls meet iff the origin lies in the convex hull of the
/// pairwise differences, and then it lies in the hull of an affinely
/// independent subset of at most `d + 1` differences.
pub fn simplices_intersect(a: &[&RationalPoint], b: &[&RationalPoint]) -> Result<bool, GeometryError> {
    let all: Vec<&RationalPoint> = a.iter().chain(b).copied().collect();
    let d = check_dims(&all)?;
    if all.len() <= d + 1 && affinely_independent(&all) {
        return Ok(false);
    }
    let diffs: Vec<RationalPoint> = a
        .iter()
        .flat_map(|p| b.iter().map(move |q| RationalPoint(p.0.iter().zip(&q.0).map(|(x, y)| x - y).collect())))
        .collect();
    let refs: Vec<&RationalPoint> = diffs.iter().collect();
    for size in 1..=(d + 1).min(refs.len()) {
        for subset in crate::complex::combinations(&refs, size) {
            if origin_in_simplex(&subset, d) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Origin in the closed simplex spanned by affinely independent points.
fn origin_in_simplex(points: &[&RationalPoint], d: usize) -> bool {
    // Solve Σ μ_i p_i = 0, Σ μ_i = 1 via the augmented matrix.
    let mut m = lifted_matrix(points);
    for (i, row) in m.iter_mut().enumerate() {
        row.push(if i == d { Rational::one() } else { Rational::zero() });
    }
    let n = points.len();
    let pivots = rref(&mut m);
    if pivots.contains(&n) || pivots.len() != n {
        // inconsistent, or the points are affinely dependent
        return false;
    }
    pivots.iter().enumerate().all(|(row, _)| !m[row][n].is_negative())
}

fn moment_point(t: i64, d: usize) -> RationalPoint {
    let t = BigInt::from(t);
    let mut acc = BigInt::one();
    RationalPoint(
        (0..d)
            .map(|_| {
                acc = &acc * &t;
                Rational::from_integer(acc.clone())
            })
            .collect(),
    )
}

/// Vertex `i` ↦ `(t, t², …, t^d)` with `t = i + 1`.
pub fn moment_coords(k: &SimplicialComplex, d: usize) -> Result<RationalCoordMap, GeometryError> {
    let params: Vec<i64> = (1..=k.num_vertices() as i64).collect();
    moment_coords_with_params(&params, d)
}

/// Moment-curve map with explicit parameters; vertex `i` uses `params[i]`.
pub fn moment_coords_with_params(params: &[i64], d: usize) -> Result<RationalCoordMap, GeometryError> {
    if d == 0 {
        return Err(GeometryError::InvalidAmbient(d));
    }
    let mut sorted = params.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(GeometryError::DuplicateParameter(w[0]));
    }
    Ok(RationalCoordMap {
        ambient: d,
        points: params.iter().map(|&t| moment_point(t, d)).collect(),
        certificate: GenericityCertificate::Moment { params: params.to_vec() },
    })
}

/// Unordered disjoint pairs `(σ, τ)` with `dim σ + dim τ = total`,
/// `dim σ <= dim τ`.
pub fn pairs_with_dim_sum(k: &SimplicialComplex, total: usize) -> Vec<(&Simplex, &Simplex)> {
    let Some(top) = k.dim() else { return Vec::new() };
    (0..=total / 2).filter(|&s| total - s <= top).flat_map(|s| k.disjoint_simplex_pairs(s, total - s)).collect()
}

/// Checks general position of `coords` on every disjoint pair whose
/// dimensions sum to one of `dim_sums`: affine independence when the pair
/// has at most `d + 1` vertices, a full-support unique dependence when it
/// has `d + 2`. Returns the number of pairs checked.
pub fn validate_generic(
    k: &SimplicialComplex,
    coords: &RationalCoordMap,
    dim_sums: &[usize],
) -> Result<usize, GeometryError> {
    coords.covers(k)?;
    let d = coords.ambient;
    let mut checked = 0;
    for &total in dim_sums {
        if total > d {
            continue;
        }
        let pairs = pairs_with_dim_sum(k, total);
        pairs.par_iter().try_for_each(|(s, t)| {
            let (is, it) = (coords.image(s), coords.image(t));
            let ok = if total == d {
                pair_crossing(&is, &it).is_ok()
            } else {
                let all: Vec<&RationalPoint> = is.into_iter().chain(it).collect();
                affinely_independent(&all)
            };
            if ok {
                Ok(())
            } else {
                Err(GeometryError::DegeneratePair { first: (*s).clone(), second: (*t).clone() })
            }
        })?;
        checked += pairs.len();
    }
    Ok(checked)
}

fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn box_radius(attempt: u32) -> i64 {
    1_000i64 << attempt.min(40)
}

fn draw_point(rng: &mut ChaCha8Rng, d: usize, radius: i64) -> RationalPoint {
    let coords: Vec<i64> = (0..d).map(|_| rng.gen_range(-radius..=radius)).collect();
    RationalPoint::from_ints(&coords)
}

/// Pseudorandom integer coordinates, redrawn on a fresh stream with a
/// doubled box until every pair with dimension sum `d - 1` or `d` is in
/// general position.
pub fn seeded_coords(k: &SimplicialComplex, d: usize, seed: u64) -> Result<RationalCoordMap, GeometryError> {
    if d == 0 {
        return Err(GeometryError::InvalidAmbient(d));
    }
    for sub_seed in 0..MAX_RETRIES {
        let radius = box_radius(sub_seed);
        let mut rng = seeded_rng(seed, sub_seed as u64);
        let points = (0..k.num_vertices()).map(|_| draw_point(&mut rng, d, radius)).collect();
        let mut map = RationalCoordMap { ambient: d, points, certificate: GenericityCertificate::Explicit };
        match validate_generic(k, &map, &[d - 1, d]) {
            Ok(pairs_validated) => {
                map.certificate = GenericityCertificate::Seeded { seed, sub_seed, box_radius: radius, pairs_validated };
                return Ok(map);
            }
            Err(GeometryError::DegeneratePair { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GeometryError::RetryBudgetExhausted { seed, attempts: MAX_RETRIES })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanKampenReport {
    pub v: u8,
    pub pairs_checked: usize,
    pub crossings: usize,
    /// Every crossing pair, in enumeration order.
    pub ledger: Vec<(Simplex, Simplex)>,
}

/// Parity of the transversal crossings between images of disjoint simplices
/// whose dimensions sum to `d`.
pub fn van_kampen_number(
    k: &SimplicialComplex,
    d: usize,
    coords: &RationalCoordMap,
) -> Result<VanKampenReport, GeometryError> {
    if coords.ambient != d {
        return Err(GeometryError::DimensionMismatch { expected: d, found: coords.ambient });
    }
    coords.covers(k)?;
    let pairs = pairs_with_dim_sum(k, d);
    let hits: Vec<bool> = pairs
        .par_iter()
        .map(|(s, t)| {
            pair_crossing(&coords.image(s), &coords.image(t))
                .map_err(|_| GeometryError::DegeneratePair { first: (*s).clone(), second: (*t).clone() })
        })
        .collect::<Result<_, _>>()?;
    let ledger: Vec<(Simplex, Simplex)> =
        pairs.iter().zip(&hits).filter(|(_, &h)| h).map(|((s, t), _)| ((*s).clone(), (*t).clone())).collect();
    Ok(VanKampenReport { v: (ledger.len() % 2) as u8, pairs_checked: pairs.len(), crossings: ledger.len(), ledger })
}

/// Whether the vertices of two disjoint sorted simplices strictly alternate
/// when merged.
fn interleaves(a: &Simplex, b: &Simplex) -> bool {
    let (a, b) = (a.vertices(), b.vertices());
    let (mut i, mut j) = (0, 0);
    let mut last: Option<bool> = None;
    while i < a.len() || j < b.len() {
        let from_a = j == b.len() || (i < a.len() && a[i] < b[j]);
        if last == Some(from_a) {
            return false;
        }
        last = Some(from_a);
        if from_a {
            i += 1;
        } else {
            j += 1;
        }
    }
    true
}

/// Pairs with dimension sum `d` whose vertex ids interleave; on the moment
/// curve with increasing parameters these are exactly the crossing pairs.
pub fn interleaving_pairs(k: &SimplicialComplex, d: usize) -> Vec<(Simplex, Simplex)> {
    pairs_with_dim_sum(k, d)
        .into_iter()
        .filter(|(s, t)| interleaves(s, t))
        .map(|(s, t)| (s.clone(), t.clone()))
        .collect()
}

/// Van Kampen number of the moment-curve map computed from vertex order
/// alone, without coordinates.
pub fn moment_crossing_oracle(k: &SimplicialComplex, d: usize) -> u8 {
    (interleaving_pairs(k, d).len() % 2) as u8
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityWitness {
    pub sigma: Simplex,
    pub tau: Simplex,
    pub sigma_extensions: usize,
    pub tau_extensions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub witness: Option<ParityWitness>,
}

/// Number of faces `σ ∪ {w}` of the complex with `w` outside `σ ∪ τ`.
fn extensions_avoiding(k: &SimplicialComplex, sigma: &Simplex, tau: &Simplex) -> usize {
    (0..k.num_vertices() as u32)
        .filter(|&w| !sigma.contains(w) && !tau.contains(w))
        .filter(|&w| k.contains(&sigma.with_vertex(w)))
        .count()
}

/// For every disjoint pair with `dim σ + dim τ = d - 1`, compares the parity
/// of the number of one-vertex extensions of σ avoiding τ with that of τ
/// avoiding σ. Reports the first pair where they differ.
pub fn check_extension_parity(k: &SimplicialComplex, d: usize) -> ParityReport {
    let Some(total) = d.checked_sub(1) else {
        return ParityReport { holds: true, pairs_checked: 0, witness: None };
    };
    let pairs = pairs_with_dim_sum(k, total);
    let witness = pairs.iter().find_map(|(s, t)| {
        let (a, b) = (extensions_avoiding(k, s, t), extensions_avoiding(k, t, s));
        (a % 2 != b % 2).then(|| ParityWitness {
            sigma: (*s).clone(),
            tau: (*t).clone(),
            sigma_extensions: a,
            tau_extensions: b,
        })
    });
    ParityReport { holds: witness.is_none(), pairs_checked: pairs.len(), witness }
}

/// Mod-2 cycle realized by a coordinate map: equidimensional faces such
/// that every codimension-one face lies in an even number of them (for
/// 0-cycles, an even number of points).
#[derive(Clone, Debug)]
pub struct PLCycle {
    faces: Vec<Simplex>,
    images: Vec<Vec<RationalPoint>>,
    ambient: usize,
}

impl PLCycle {
    pub fn new(faces: Vec<Simplex>, coords: &RationalCoordMap) -> Result<Self, GeometryError> {
        let Some(dim) = faces.first().map(Simplex::dim) else {
            return Err(GeometryError::NotACycle("no faces".into()));
        };
        if faces.iter().any(|f| f.dim() != dim) {
            return Err(GeometryError::NotACycle("faces of mixed dimension".into()));
        }
        if let Some(&v) = faces.iter().flat_map(|f| f.vertices()).find(|&&v| v as usize >= coords.points.len()) {
            return Err(GeometryError::MissingVertices { expected: v as usize + 1, found: coords.points.len() });
        }
        if dim == 0 {
            if !faces.len().is_multiple_of(2) {
                return Err(GeometryError::NotACycle("odd number of points".into()));
            }
        } else {
            let mut count: std::collections::HashMap<Simplex, usize> = Default::default();
            for f in &faces {
                for b in f.boundary() {
                    *count.entry(b).or_default() += 1;
                }
            }
            if let Some((b, _)) = count.iter().find(|(_, &c)| c % 2 == 1) {
                return Err(GeometryError::NotACycle(format!("{b} has odd degree")));
            }
        }
        let images = faces.iter().map(|f| coords.image(f).into_iter().cloned().collect()).collect();
        Ok(PLCycle { faces, images, ambient: coords.ambient })
    }

    /// Cycle from a mark: the mark's simplices if they form a cycle, or
    /// the boundary of a mark consisting of a single simplex.
    pub fn from_mark(k: &SimplicialComplex, name: &str, coords: &RationalCoordMap) -> Result<Self, GeometryError> {
        let list = k.mark(name)?;
        match Self::new(list.to_vec(), coords) {
            Ok(c) => Ok(c),
            Err(GeometryError::NotACycle(_)) if list.len() == 1 && list[0].dim() >= 1 => {
                Self::new(list[0].boundary().collect(), coords)
            }
            Err(e) => Err(e),
        }
    }

    pub fn dim(&self) -> usize {
        self.faces[0].dim()
    }

    pub fn faces(&self) -> &[Simplex] {
        &self.faces
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// The cycle translated by a vector.
    pub fn translated(&self, by: &RationalPoint) -> PLCycle {
        PLCycle {
            faces: self.faces.clone(),
            images: self.images.iter().map(|f| f.iter().map(|p| p.translated(by)).collect()).collect(),
            ambient: self.ambient,
        }
    }
}

/// Mod-2 linking number: parity of crossings between the cone from `apex`
/// over each face of `a` and the faces of `b`.
pub fn lk2(a: &PLCycle, b: &PLCycle, apex: &RationalPoint) -> Result<u8, GeometryError> {
    let d = a.ambient;
    if b.ambient != d || apex.dim() != d {
        return Err(GeometryError::DimensionMismatch {
            expected: d,
            found: if b.ambient != d { b.ambient } else { apex.dim() },
        });
    }
    if a.dim() + b.dim() + 1 != d {
        return Err(GeometryError::LinkDimension { a: a.dim(), b: b.dim(), target: d as isize - 1 });
    }
    for (fa, ia) in a.faces.iter().zip(&a.images) {
        let ia: Vec<&RationalPoint> = ia.iter().collect();
        for (fb, ib) in b.faces.iter().zip(&b.images) {
            let ib: Vec<&RationalPoint> = ib.iter().collect();
            if simplices_intersect(&ia, &ib)? {
                return Err(GeometryError::NotDisjoint(fa.to_string(), fb.to_string()));
            }
        }
    }
    let mut crossings = 0usize;
    for ia in &a.images {
        let cone: Vec<&RationalPoint> = std::iter::once(apex).chain(ia.iter()).collect();
        for ib in &b.images {
            let ib: Vec<&RationalPoint> = ib.iter().collect();
            match pair_crossing(&cone, &ib) {
                Ok(true) => crossings += 1,
                Ok(false) => {}
                Err(_) => return Err(GeometryError::DegenerateApex),
            }
        }
    }
    Ok((crossings % 2) as u8)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    pub lk: u8,
    pub apex: RationalPoint,
    pub seed: u64,
    pub attempts: u32,
}

/// `lk2` with the apex drawn from the seeded generator used for maps,
/// redrawn while it is degenerate.
pub fn lk2_seeded(a: &PLCycle, b: &PLCycle, seed: u64) -> Result<LinkReport, GeometryError> {
    for attempt in 0..MAX_RETRIES {
        let mut rng = seeded_rng(seed, (1u64 << 32) | attempt as u64);
        let apex = draw_point(&mut rng, a.ambient, box_radius(attempt));
        match lk2(a, b, &apex) {
            Ok(lk) => return Ok(LinkReport { lk, apex, seed, attempts: attempt + 1 }),
            Err(GeometryError::DegenerateApex) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GeometryError::ApexBudgetExhausted(MAX_RETRIES))
}

/// Integer point, convenience for tests and fixtures.
pub fn point(coords: &[i64]) -> RationalPoint {
    RationalPoint::from_ints(coords)
}

#[doc(hidden)]
pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::combinations;
    use proptest::prelude::*;

    fn int(v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }

    fn refs(p: &[RationalPoint]) -> Vec<&RationalPoint> {
        p.iter().collect()
    }

    fn k5() -> SimplicialComplex {
        SimplicialComplex::from_facets(["a", "b", "c", "d", "e"], combinations(&[0u32, 1, 2, 3, 4], 2)).unwrap()
    }

    #[test]
    fn crossing_examples() {
        let s = [point(&[0, 0]), point(&[2, 2])];
        let t = [point(&[0, 2]), point(&[2, 0])];
        assert!(pair_crossing(&refs(&s), &refs(&t)).unwrap());
        let s = [point(&[0, 0]), point(&[1, 1])];
        let t = [point(&[5, 0]), point(&[6, 1])];
        assert!(!pair_crossing(&refs(&s), &refs(&t)).unwrap());
        let s = [point(&[0, 0]), point(&[4, 0]), point(&[0, 4])];
        let t = [point(&[1, 1])];
        assert!(pair_crossing(&refs(&s), &refs(&t)).unwrap());
    }

    #[test]
    fn crossing_rejects_degenerate() {
        // touching at an endpoint: zero coefficient
        let s = [point(&[0, 0]), point(&[2, 0])];
        let t = [point(&[1, 0]), point(&[1, 5])];
        assert_eq!(pair_crossing(&refs(&s), &refs(&t)), Err(GeometryError::Degenerate));
        // collinear
        let s = [point(&[0, 0]), point(&[1, 0])];
        let t = [point(&[2, 0]), point(&[3, 0])];
        assert_eq!(pair_crossing(&refs(&s), &refs(&t)), Err(GeometryError::Degenerate));
        let s = [point(&[0, 0])];
        assert!(matches!(pair_crossing(&refs(&s), &refs(&t)), Err(GeometryError::WrongPointCount { .. })));
    }

    #[test]
    fn moment_points() {
        let k = SimplicialComplex::from_facets(["a", "b", "c"], vec![vec![0, 1, 2]]).unwrap();
        let m = moment_coords(&k, 2).unwrap();
        assert_eq!(m.points(), &[point(&[1, 1]), point(&[2, 4]), point(&[3, 9])]);
        assert_eq!(moment_coords_with_params(&[1, 2, 2], 2), Err(GeometryError::DuplicateParameter(2)));
        assert_eq!(moment_coords(&k, 0), Err(GeometryError::InvalidAmbient(0)));
    }

    #[test]
    fn k5_moment_generic_and_crossings() {
        let k = k5();
        let m = moment_coords(&k, 2).unwrap();
        assert_eq!(validate_generic(&k, &m, &[2]).unwrap(), 15);
        let r = van_kampen_number(&k, 2, &m).unwrap();
        assert_eq!((r.v, r.crossings, r.pairs_checked), (1, 5, 15));
        assert_eq!(moment_crossing_oracle(&k, 2), 1);
    }

    #[test]
    fn full_triangle_has_no_pairs() {
        let k = SimplicialComplex::from_facets(["a", "b", "c"], vec![vec![0, 1, 2]]).unwrap();
        let m = moment_coords(&k, 2).unwrap();
        let r = van_kampen_number(&k, 2, &m).unwrap();
        assert_eq!((r.v, r.pairs_checked), (0, 0));
    }

    #[test]
    fn seeded_rejects_zero_dim() {
        assert_eq!(seeded_coords(&k5(), 0, 1), Err(GeometryError::InvalidAmbient(0)));
    }

    #[test]
    fn seeded_is_deterministic() {
        let a = seeded_coords(&k5(), 2, 7).unwrap();
        let b = seeded_coords(&k5(), 2, 7).unwrap();
        assert_eq!(a, b);
        assert!(matches!(a.certificate(), GenericityCertificate::Seeded { seed: 7, .. }));
    }

    #[test]
    fn interleaving() {
        let s = |v: &[u32]| Simplex::new(v.to_vec()).unwrap();
        assert!(interleaves(&s(&[0, 2]), &s(&[1, 3])));
        assert!(!interleaves(&s(&[0, 1]), &s(&[2, 3])));
        assert!(interleaves(&s(&[0, 2, 4]), &s(&[1, 3])));
        assert!(!interleaves(&s(&[0, 3]), &s(&[1, 2])));
    }

    #[test]
    fn path_parity_witness() {
        let k = SimplicialComplex::from_facets(["u", "v", "w"], vec![vec![0, 1], vec![1, 2]]).unwrap();
        let r = check_extension_parity(&k, 1);
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!((w.sigma, w.tau), (Simplex::vertex(0), Simplex::vertex(1)));
        assert_eq!((w.sigma_extensions, w.tau_extensions), (0, 1));
    }

    #[test]
    fn k5_parity_holds() {
        assert!(check_extension_parity(&k5(), 2).holds);
    }

    #[test]
    fn intersect_exact() {
        let a = [point(&[0, 0, 0]), point(&[2, 0, 0])];
        let b = [point(&[1, 0, 0]), point(&[1, 1, 0])];
        assert!(simplices_intersect(&refs(&a), &refs(&b)).unwrap());
        let b = [point(&[1, 1, 0]), point(&[1, 2, 0])];
        assert!(!simplices_intersect(&refs(&a), &refs(&b)).unwrap());
        let b = [point(&[2, 0, 0])];
        assert!(simplices_intersect(&refs(&a), &refs(&b)).unwrap());
        let b = [point(&[3, 0, 0]), point(&[5, 0, 0])];
        assert!(!simplices_intersect(&refs(&a), &refs(&b)).unwrap());
    }

    fn transform_strategy() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
        (proptest::collection::vec(proptest::collection::vec(-5i64..6, 2), 2), proptest::collection::vec(-20i64..21, 2))
            .prop_filter("invertible", |(m, _)| m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0)
    }

    fn apply(m: &[Vec<i64>], shift: &[i64], p: &RationalPoint, scale: i64) -> RationalPoint {
        let c = p.coords();
        RationalPoint::new(
            (0..2).map(|i| (&c[0] * int(m[i][0]) + &c[1] * int(m[i][1])) / int(scale) + int(shift[i])).collect(),
        )
    }

    fn rational_matrix(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
        m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn big_matrix(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Kernel of the lifted matrix by rational row reduction.
    fn kernel_by_rref(points: &[RationalPoint]) -> Option<Vec<Rational>> {
        let d = points[0].dim();
        let mut m: Vec<Vec<Rational>> = (0..d).map(|i| points.iter().map(|p| p.0[i].clone()).collect()).collect();
        m.push(vec![Rational::one(); points.len()]);
        let pivots = rref(&mut m);
        if pivots.len() != d + 1 {
            return None;
        }
        let free = (0..d + 2).find(|c| !pivots.contains(c)).unwrap();
        let mut lambda = vec![Rational::zero(); d + 2];
        lambda[free] = Rational::one();
        for (row, &c) in pivots.iter().enumerate() {
            lambda[c] = -m[row][free].clone();
        }
        Some(lambda)
    }

    fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..7)
            .prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r))
    }

    fn config_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5).prop_flat_map(|d| proptest::collection::vec(proptest::collection::vec(-4i64..5, d), d + 2))
    }

    #[test]
    fn big_coordinates_fall_back_to_bigint() {
        let huge = i64::MAX / 3;
        let pts = [point(&[0, 0]), point(&[huge, huge]), point(&[0, huge]), point(&[huge, 0])];
        assert!(pair_crossing(&refs(&pts[..2]), &refs(&pts[2..])).unwrap());
        let m = big_matrix(&[vec![huge, 1, 2], vec![3, huge, 5], vec![7, 11, huge]]);
        let mut rm = rational_matrix(&[vec![huge, 1, 2], vec![3, huge, 5], vec![7, 11, huge]]);
        assert_eq!(rref(&mut rm).len(), 3);
        // cofactor expansion along the first column
        let det = Rational::from_integer(integer_det(m));
        let by_hand = int(huge) * (int(huge) * int(huge) - int(55)) - int(3) * (int(huge) - int(22))
            + int(7) * (int(5) - int(2) * int(huge));
        assert_eq!(det, by_hand);
    }

    proptest! {
        #[test]
        fn bareiss_rank_matches_rref(m in matrix_strategy()) {
            let mut r = rational_matrix(&m);
            prop_assert_eq!(integer_rank(&big_matrix(&m)), rref(&mut r).len());
        }

        #[test]
        fn dependence_parallel_to_rref_kernel(cfg in config_strategy()) {
            let pts: Vec<RationalPoint> = cfg.iter().map(|c| point(c)).collect();
            let ours = affine_dependence(&refs(&pts));
            match kernel_by_rref(&pts) {
                None => prop_assert_eq!(ours, Err(GeometryError::Degenerate)),
                Some(k) => {
                    let l = ours.unwrap();
                    for i in 0..l.len() {
                        for j in 0..l.len() {
                            prop_assert_eq!(&l[i] * &k[j], &l[j] * &k[i]);
                        }
                    }
                }
            }
        }

        #[test]
        fn crossing_invariant_under_affine_maps((m, shift) in transform_strategy(), scale in 1i64..7) {
            let fixtures: Vec<(Vec<RationalPoint>, Vec<RationalPoint>)> = vec![
                (vec![point(&[0, 0]), point(&[2, 2])], vec![point(&[0, 2]), point(&[2, 0])]),
                (vec![point(&[0, 0]), point(&[1, 1])], vec![point(&[5, 0]), point(&[6, 1])]),
                (vec![point(&[0, 0]), point(&[4, 0]), point(&[0, 4])], vec![point(&[1, 1])]),
                (vec![point(&[0, 0]), point(&[4, 0]), point(&[0, 4])], vec![point(&[5, 5])]),
            ];
            for (s, t) in fixtures {
                let before = pair_crossing(&refs(&s), &refs(&t)).unwrap();
                let s2: Vec<_> = s.iter().map(|p| apply(&m, &shift, p, scale)).collect();
                let t2: Vec<_> = t.iter().map(|p| apply(&m, &shift, p, scale)).collect();
                prop_assert_eq!(pair_crossing(&refs(&s2), &refs(&t2)).unwrap(), before);
            }
        }
    }
}
