//! Primitive types: exact rational keys, intervals, squares and quadtree cells.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Exact rational coordinate.
///
/// Values whose reduced numerator and denominator fit in `i64` are kept
/// inline; everything else falls back to a big rational. The representation
/// is canonical, so derived equality and hashing agree with the value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalKey(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl RationalKey {
    pub fn from_int(n: i64) -> Self {
        RationalKey(Repr::Small(n, 1))
    }

    /// `n/d`, panics on a zero denominator.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Self {
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if let (Ok(a), Ok(b)) = (i64::try_from(n), i64::try_from(d)) {
            RationalKey(Repr::Small(a, b))
        } else {
            RationalKey(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d))))
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        // BigRational is always reduced with a positive denominator.
        if let (Some(a), Some(b)) = (r.numer().to_i64(), r.denom().to_i64()) {
            RationalKey(Repr::Small(a, b))
        } else {
            RationalKey(Repr::Big(r))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &o.0) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(x), Some(y), Some(z)) = (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                if let Some(s) = x.checked_add(y) {
                    return Self::from_i128(s, z);
                }
            }
        }
        Self::from_big(self.to_big() + o.to_big())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) if *n != i64::MIN => RationalKey(Repr::Small(-n, *d)),
            _ => Self::from_big(-self.to_big()),
        }
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> i64 {
        match &self.0 {
            Repr::Small(n, d) => n.div_euclid(*d),
            Repr::Big(r) => r.floor().to_integer().to_i64().expect("floor out of i64 range"),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exact conversion of a finite float.
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Self::from_big)
    }
}

impl Ord for RationalKey {
    fn cmp(&self, o: &Self) -> Ordering {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl PartialOrd for RationalKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for RationalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, d) => write!(f, "{}/{}", n, d),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for RationalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RationalKey {
    type Err = Error;

    /// Accepts `n/d`, plain integers and decimals such as `-2.125`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad rational {:?}", s));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Self::from_big(BigRational::new(n, d)));
        }
        if let Some((ip, fp)) = s.split_once('.') {
            let neg = ip.starts_with('-');
            let ip_abs = ip.trim_start_matches(['-', '+']);
            if !fp.chars().all(|c| c.is_ascii_digit()) || fp.is_empty() {
                return Err(bad());
            }
            let whole: BigInt = if ip_abs.is_empty() { BigInt::zero() } else { ip_abs.parse().map_err(|_| bad())? };
            let frac: BigInt = fp.parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), fp.len());
            let mut v = BigRational::new(whole * &scale + frac, scale);
            if neg {
                v = -v;
            }
            return Ok(Self::from_big(v));
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Self::from_big(BigRational::from_integer(n)))
    }
}

impl Serialize for RationalKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for RationalKey {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

/// A key strictly between `a` and `b` (their midpoint).
pub fn key_between(a: &RationalKey, b: &RationalKey) -> Result<RationalKey, Error> {
    if a >= b {
        return Err(Error::Precondition(format!("key_between needs a < b, got {} and {}", a, b)));
    }
    let s = a.add(b);
    Ok(match &s.0 {
        Repr::Small(n, d) => RationalKey::from_i128(*n as i128, 2 * (*d as i128)),
        Repr::Big(r) => RationalKey::from_big(r / BigRational::from_integer(BigInt::from(2))),
    })
}

/// Which end of an interval a key belongs to. Left ends sort first at equal
/// value, which keeps closed-interval touching as an intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

/// Endpoint key with a deterministic tie-break: value, then side, then id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EKey {
    pub v: RationalKey,
    pub side: Side,
    pub id: u64,
}

/// Query bound for open ranges; the variant order gives `NegInf < Key < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    Key(EKey),
    PosInf,
}

impl Bound {
    pub fn below(&self, k: &EKey) -> bool {
        match self {
            Bound::NegInf => true,
            Bound::Key(b) => b < k,
            Bound::PosInf => false,
        }
    }

    pub fn above(&self, k: &EKey) -> bool {
        match self {
            Bound::NegInf => false,
            Bound::Key(b) => b > k,
            Bound::PosInf => true,
        }
    }
}

/// Closed interval `[l, r]` with a unique id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub id: u64,
    pub l: RationalKey,
    pub r: RationalKey,
    #[serde(default)]
    pub synthetic: bool,
}

impl Interval {
    pub fn new(id: u64, l: RationalKey, r: RationalKey) -> Result<Self, Error> {
        if l >= r {
            return Err(Error::Precondition(format!("interval {} needs l < r", id)));
        }
        Ok(Interval { id, l, r, synthetic: false })
    }

    pub fn int(id: u64, l: i64, r: i64) -> Self {
        Self::new(id, l.into(), r.into()).expect("l < r")
    }

    pub fn lkey(&self) -> EKey {
        EKey { v: self.l.clone(), side: Side::L, id: self.id }
    }

    pub fn rkey(&self) -> EKey {
        EKey { v: self.r.clone(), side: Side::R, id: self.id }
    }

    /// Intersection under the tie-broken endpoint order. For intervals with
    /// pairwise distinct endpoint values this is closed intersection.
    pub fn intersects(&self, o: &Interval) -> bool {
        self.lkey().max(o.lkey()) <= self.rkey().min(o.rkey())
    }

    /// `o` strictly inside `self` under the tie-broken order.
    pub fn strictly_contains(&self, o: &Interval) -> bool {
        self.lkey() < o.lkey() && o.rkey() < self.rkey()
    }
}

/// Axis-aligned closed square `[x, x+size] x [y, y+size]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Square {
    pub id: u64,
    pub x: f64,
    pub y: f64,
    pub size: f64,
}

impl Square {
    pub fn new(id: u64, x: f64, y: f64, size: f64) -> Self {
        Square { id, x, y, size }
    }

    pub fn intersects(&self, o: &Square) -> bool {
        self.x.max(o.x) <= (self.x + self.size).min(o.x + o.size)
            && self.y.max(o.y) <= (self.y + self.size).min(o.y + o.size)
    }
}

/// Quadrant of a child inside its parent, encoded by (high x bit, high y bit).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    I,
    II,
    III,
    IV,
}

pub const QUADRANTS: [Quadrant; 4] = [Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV];

impl Quadrant {
    pub fn from_bits(hx: u64, hy: u64) -> Quadrant {
        match (hx & 1, hy & 1) {
            (1, 1) => Quadrant::I,
            (0, 1) => Quadrant::II,
            (0, 0) => Quadrant::III,
            _ => Quadrant::IV,
        }
    }

    pub fn bits(self) -> (u64, u64) {
        match self {
            Quadrant::I => (1, 1),
            Quadrant::II => (0, 1),
            Quadrant::III => (0, 0),
            Quadrant::IV => (1, 0),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Random quadtree root: side `w` in [1,2], lower-left `(ox, oy)` chosen so the
/// root covers the unit square. `b` is the quantization depth in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadRoot {
    pub seed: u64,
    pub b: u32,
    pub ox: f64,
    pub oy: f64,
    pub w: f64,
}

pub const DEFAULT_BITS: u32 = 40;

impl QuadRoot {
    pub fn from_seed(seed: u64) -> Self {
        Self::with_bits(seed, DEFAULT_BITS)
    }

    pub fn with_bits(seed: u64, b: u32) -> Self {
        assert!((1..=60).contains(&b));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: f64 = rng.gen_range(1.0..=2.0);
        let ox = rng.gen_range((1.0 - w)..=0.0);
        let oy = rng.gen_range((1.0 - w)..=0.0);
        QuadRoot { seed, b, ox, oy, w }
    }

    /// The root equal to the unit square.
    pub fn unit(b: u32) -> Self {
        QuadRoot { seed: 0, b, ox: 0.0, oy: 0.0, w: 1.0 }
    }

    fn quantize(&self, v: f64, o: f64) -> Result<u64, Error> {
        let local = (v - o) / self.w;
        if !(-1e-12..=1.0 + 1e-12).contains(&local) || local.is_nan() {
            return Err(Error::OutOfRoot);
        }
        let n = 1u64 << self.b;
        let g = (local * n as f64).floor();
        Ok((g.max(0.0) as u64).min(n - 1))
    }

    /// Map a square to the doubled integer grid (see [`QSquare`]).
    pub fn quantize_square(&self, s: &Square) -> Result<QSquare, Error> {
        if !(s.size > 0.0) {
            return Err(Error::Precondition(format!("square {} needs positive size", s.id)));
        }
        let x0 = self.quantize(s.x, self.ox)?;
        let x1 = self.quantize(s.x + s.size, self.ox)?;
        let y0 = self.quantize(s.y, self.oy)?;
        let y1 = self.quantize(s.y + s.size, self.oy)?;
        Ok(QSquare { id: s.id, x0: 2 * x0, y0: 2 * y0, x1: 2 * x1, y1: 2 * y1, bits: self.b })
    }
}

/// Quantized square on a grid of doubled coordinates: grid point `g` is stored
/// as `2g`, so every cell center, including depth-`b` cells, is an integer.
/// Bounds are inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QSquare {
    pub id: u64,
    pub x0: u64,
    pub y0: u64,
    pub x1: u64,
    pub y1: u64,
    pub bits: u32,
}

impl QSquare {
    pub fn intersects(&self, o: &QSquare) -> bool {
        self.x0.max(o.x0) <= self.x1.min(o.x1) && self.y0.max(o.y0) <= self.y1.min(o.y1)
    }

    pub fn contains_point(&self, p: (u64, u64)) -> bool {
        self.x0 <= p.0 && p.0 <= self.x1 && self.y0 <= p.1 && p.1 <= self.y1
    }
}

/// Quadtree cell: depth plus grid indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub depth: u32,
    pub ix: u64,
    pub iy: u64,
}

impl CellId {
    pub const ROOT: CellId = CellId { depth: 0, ix: 0, iy: 0 };

    pub fn new(depth: u32, ix: u64, iy: u64) -> Self {
        CellId { depth, ix, iy }
    }

    pub fn parent(&self) -> Option<CellId> {
        (self.depth > 0).then(|| CellId::new(self.depth - 1, self.ix >> 1, self.iy >> 1))
    }

    pub fn child(&self, q: Quadrant) -> CellId {
        let (hx, hy) = q.bits();
        CellId::new(self.depth + 1, (self.ix << 1) | hx, (self.iy << 1) | hy)
    }

    /// Ancestor at depth `d`; `d` must not exceed this depth.
    pub fn ancestor(&self, d: u32) -> CellId {
        debug_assert!(d <= self.depth);
        let s = self.depth - d;
        CellId::new(d, self.ix >> s, self.iy >> s)
    }

    pub fn is_ancestor_of(&self, o: &CellId) -> bool {
        self.depth <= o.depth && o.ancestor(self.depth) == *self
    }

    /// Quadrant label of this cell's child toward descendant `o`.
    pub fn quadrant_toward(&self, o: &CellId) -> Quadrant {
        debug_assert!(self.depth < o.depth && self.is_ancestor_of(o));
        let c = o.ancestor(self.depth + 1);
        Quadrant::from_bits(c.ix, c.iy)
    }

    /// Inclusive bounds on the doubled grid for quantization depth `b`.
    pub fn bounds(&self, b: u32) -> (u64, u64, u64, u64) {
        let w = 1u64 << (b - self.depth + 1);
        (self.ix * w, self.iy * w, self.ix * w + w - 1, self.iy * w + w - 1)
    }

    pub fn center(&self, b: u32) -> (u64, u64) {
        let h = 1u64 << (b - self.depth);
        let w = 2 * h;
        (self.ix * w + h, self.iy * w + h)
    }

    pub fn contains(&self, s: &QSquare) -> bool {
        let (x0, y0, x1, y1) = self.bounds(s.bits);
        x0 <= s.x0 && s.x1 <= x1 && y0 <= s.y0 && s.y1 <= y1
    }

    /// Deepest common ancestor.
    pub fn lca(&self, o: &CellId) -> CellId {
        let d = self.depth.min(o.depth);
        let (a, b) = (self.ancestor(d), o.ancestor(d));
        let diff = (a.ix ^ b.ix) | (a.iy ^ b.iy);
        let up = 64 - diff.leading_zeros();
        a.ancestor(d - up)
    }
}

fn common_prefix(a: u64, b: u64, bits: u32) -> u32 {
    let x = a ^ b;
    if x == 0 {
        bits
    } else {
        bits - (64 - x.leading_zeros())
    }
}

/// Smallest quadtree cell containing the quantized square.
pub fn node_of_q(s: &QSquare) -> CellId {
    let b = s.bits;
    let (gx0, gx1, gy0, gy1) = (s.x0 >> 1, s.x1 >> 1, s.y0 >> 1, s.y1 >> 1);
    let d = common_prefix(gx0, gx1, b).min(common_prefix(gy0, gy1, b));
    CellId::new(d, gx0 >> (b - d), gy0 >> (b - d))
}

pub fn node_of(s: &Square, root: &QuadRoot) -> Result<CellId, Error> {
    Ok(node_of_q(&root.quantize_square(s)?))
}

pub fn is_centered_q(s: &QSquare) -> bool {
    s.contains_point(node_of_q(s).center(s.bits))
}

/// True iff the square contains (closed) the center of its node.
pub fn is_centered(s: &Square, root: &QuadRoot) -> bool {
    root.quantize_square(s).map(|q| is_centered_q(&q)).unwrap_or(false)
}

pub fn quadrant_of(child: &CellId, parent: &CellId) -> Result<Quadrant, Error> {
    if child.parent() != Some(*parent) {
        return Err(Error::Precondition(format!("{:?} is not the parent of {:?}", parent, child)));
    }
    Ok(Quadrant::from_bits(child.ix, child.iy))
}

/// Shorthand for `RationalKey::new`.
pub fn rational(n: i64, d: i64) -> RationalKey {
    RationalKey::new(n, d)
}
