//! Exactly represented piecewise-linear functions of a π-unit frequency.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::interval_set::IntervalSet;
use super::rational::{format_rational, int, parse_rational, PiRational, Rational};
use crate::error::{Error, Result};

/// q ↦ slope·q + intercept.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Affine {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Affine {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Affine { slope, intercept }
    }

    pub fn constant(c: Rational) -> Self {
        Affine::new(Rational::zero(), c)
    }

    pub fn zero() -> Self {
        Affine::constant(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.slope.is_zero() && self.intercept.is_zero()
    }

    pub fn at(&self, xi: &PiRational) -> Rational {
        &self.slope * xi.value() + &self.intercept
    }

    fn add(&self, other: &Affine) -> Affine {
        Affine::new(&self.slope + &other.slope, &self.intercept + &other.intercept)
    }

    fn scale(&self, c: &Rational) -> Affine {
        Affine::new(&self.slope * c, &self.intercept * c)
    }

    /// The zero of a nonconstant affine map.
    fn root(&self) -> Option<PiRational> {
        if self.slope.is_zero() {
            None
        } else {
            Some(PiRational::from_rational(-&self.intercept / &self.slope))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Piece {
    pub lo: PiRational,
    pub hi: PiRational,
    pub affine: Affine,
}

impl Piece {
    pub fn new(lo: PiRational, hi: PiRational, affine: Affine) -> Self {
        Piece { lo, hi, affine }
    }

    /// Limit of the affine map as ξ ↑ hi.
    pub fn value_at_hi(&self) -> Rational {
        self.affine.at(&self.hi)
    }

    pub fn value_at_lo(&self) -> Rational {
        self.affine.at(&self.lo)
    }
}

/// A function that is affine on finitely many half-open pieces and
/// identically zero elsewhere. Canonical: pieces sorted, disjoint, nonzero,
/// and adjacent pieces carrying the same affine map are merged.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PiecewiseLinear {
    pieces: Vec<Piece>,
}

impl PiecewiseLinear {
    pub fn zero() -> Self {
        PiecewiseLinear { pieces: Vec::new() }
    }

    /// Validating constructor: pieces must be nonempty and pairwise disjoint.
    pub fn new(mut pieces: Vec<Piece>) -> Result<Self> {
        pieces.sort_by(|a, b| a.lo.cmp(&b.lo));
        for p in &pieces {
            if p.lo >= p.hi {
                return Err(Error::validation(
                    "pwl piece nonempty",
                    format!("piece [{}, {}) is empty", p.lo, p.hi),
                ));
            }
        }
        for w in pieces.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(Error::validation(
                    "pwl pieces disjoint",
                    format!("[{}, {}) overlaps [{}, {})", w[0].lo, w[0].hi, w[1].lo, w[1].hi),
                ));
            }
        }
        Ok(Self::canonical(pieces))
    }

    /// Constant `c` on `set`, zero elsewhere.
    pub fn indicator(set: &IntervalSet, c: Rational) -> Self {
        let pieces = set
            .pieces()
            .iter()
            .map(|(l, r)| Piece::new(l.clone(), r.clone(), Affine::constant(c.clone())))
            .collect();
        Self::canonical(pieces)
    }

    /// Expects sorted disjoint pieces.
    fn canonical(pieces: Vec<Piece>) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces.into_iter().filter(|p| !p.affine.is_zero() && p.lo < p.hi) {
            match out.last_mut() {
                Some(last) if last.hi == p.lo && last.affine == p.affine => last.hi = p.hi,
                _ => out.push(p),
            }
        }
        PiecewiseLinear { pieces: out }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    fn piece_containing(&self, xi: &PiRational) -> Option<&Piece> {
        let idx = self.pieces.partition_point(|p| &p.hi <= xi);
        self.pieces.get(idx).filter(|p| &p.lo <= xi)
    }

    fn piece_left_of(&self, xi: &PiRational) -> Option<&Piece> {
        let idx = self.pieces.partition_point(|p| &p.hi < xi);
        self.pieces.get(idx).filter(|p| &p.lo < xi)
    }

    pub fn eval(&self, xi: &PiRational) -> Rational {
        self.piece_containing(xi)
            .map(|p| p.affine.at(xi))
            .unwrap_or_else(Rational::zero)
    }

    pub fn right_limit(&self, xi: &PiRational) -> Rational {
        self.eval(xi)
    }

    pub fn left_limit(&self, xi: &PiRational) -> Rational {
        self.piece_left_of(xi)
            .map(|p| p.affine.at(xi))
            .unwrap_or_else(Rational::zero)
    }

    /// Affine maps active just left and just right of ξ.
    pub fn one_sided_affines(&self, xi: &PiRational) -> (Affine, Affine) {
        let left = self
            .piece_left_of(xi)
            .map(|p| p.affine.clone())
            .unwrap_or_else(Affine::zero);
        let right = self
            .piece_containing(xi)
            .map(|p| p.affine.clone())
            .unwrap_or_else(Affine::zero);
        (left, right)
    }

    pub fn breakpoints(&self) -> Vec<PiRational> {
        let mut b: Vec<PiRational> = self.pieces.iter().flat_map(|p| [p.lo.clone(), p.hi.clone()]).collect();
        b.dedup();
        b
    }

    /// Where f ≠ 0, up to the finitely many isolated zeros of its pieces.
    pub fn support(&self) -> IntervalSet {
        IntervalSet::from_pieces(self.pieces.iter().map(|p| (p.lo.clone(), p.hi.clone())))
    }

    pub fn neg(&self) -> Self {
        self.scale_values(&-Rational::one())
    }

    /// c·f.
    pub fn scale_values(&self, c: &Rational) -> Self {
        Self::canonical(
            self.pieces
                .iter()
                .map(|p| Piece::new(p.lo.clone(), p.hi.clone(), p.affine.scale(c)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut cuts: Vec<PiRational> = self.breakpoints();
        cuts.extend(other.breakpoints());
        cuts.sort();
        cuts.dedup();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let a = self.piece_containing(&w[0]).map(|p| &p.affine);
            let b = other.piece_containing(&w[0]).map(|p| &p.affine);
            let affine = match (a, b) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => continue,
            };
            pieces.push(Piece::new(w[0].clone(), w[1].clone(), affine));
        }
        Self::canonical(pieces)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// ξ ↦ f(rξ) for a nonzero rational r. Negative factors reverse the
    /// half-open convention on a null set (see [`IntervalSet::scale`]).
    pub fn dilate(&self, r: &Rational) -> Self {
        assert!(!r.is_zero(), "dilation factor must be nonzero");
        let inv = r.recip();
        let mut pieces: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| {
                let (a, b) = (p.lo.scale(&inv), p.hi.scale(&inv));
                let (lo, hi) = if r.is_negative() { (b, a) } else { (a, b) };
                Piece::new(lo, hi, Affine::new(&p.affine.slope * r, p.affine.intercept.clone()))
            })
            .collect();
        pieces.sort_by(|a, b| a.lo.cmp(&b.lo));
        Self::canonical(pieces)
    }

    /// ξ ↦ f(aξ).
    pub fn dilate_int(&self, a: i64) -> Self {
        self.dilate(&int(a))
    }

    /// ξ ↦ f(ξ + 2kπ).
    pub fn translate(&self, k: i64) -> Self {
        let shift = int(2 * k);
        let by = PiRational::from_rational(-shift.clone());
        Self::canonical(
            self.pieces
                .iter()
                .map(|p| {
                    Piece::new(
                        &p.lo + &by,
                        &p.hi + &by,
                        Affine::new(p.affine.slope.clone(), &p.affine.intercept + &p.affine.slope * &shift),
                    )
                })
                .collect(),
        )
    }

    /// max(f, 0).
    pub fn positive_part(&self) -> Self {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let (v0, v1) = (p.value_at_lo(), p.value_at_hi());
            match (v0.is_negative(), v1.is_negative()) {
                (false, false) => pieces.push(p.clone()),
                (true, true) => {}
                _ => {
                    // sign change strictly inside the piece
                    let root = p.affine.root().expect("sign change implies nonzero slope");
                    let keep = if v0.is_negative() {
                        Piece::new(root, p.hi.clone(), p.affine.clone())
                    } else {
                        Piece::new(p.lo.clone(), root, p.affine.clone())
                    };
                    pieces.push(keep);
                }
            }
        }
        Self::canonical(pieces)
    }

    /// f·χ_E.
    pub fn restrict(&self, set: &IntervalSet) -> Self {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let clip = set.intersect(&IntervalSet::interval(p.lo.clone(), p.hi.clone()));
            for (l, r) in clip.pieces() {
                pieces.push(Piece::new(l.clone(), r.clone(), p.affine.clone()));
            }
        }
        Self::canonical(pieces)
    }

    /// A point where f < 0, if any. A piecewise-affine function is
    /// nonnegative iff it is nonnegative at every piece start and every
    /// left limit at a piece end.
    pub fn negative_witness(&self) -> Option<PiRational> {
        for p in &self.pieces {
            if p.value_at_lo().is_negative() {
                return Some(p.lo.clone());
            }
            if p.value_at_hi().is_negative() {
                let root = p.affine.root().expect("negative end after nonnegative start");
                return Some(root.midpoint(&p.hi));
            }
        }
        None
    }

    pub fn is_nonnegative(&self) -> bool {
        self.negative_witness().is_none()
    }

    /// sup f, attained or approached at a piece end (0 counts, since f
    /// vanishes off its support).
    pub fn supremum(&self) -> Rational {
        self.pieces
            .iter()
            .flat_map(|p| [p.value_at_lo(), p.value_at_hi()])
            .fold(Rational::zero(), |m, v| if v > m { v } else { m })
    }

    /// ∫ f(q) dq in π-units.
    pub fn integral(&self) -> Rational {
        let two = int(2);
        self.pieces.iter().fold(Rational::zero(), |acc, p| {
            let (a, b) = (p.lo.value(), p.hi.value());
            acc + (&p.affine.slope * (b * b - a * a) / &two + &p.affine.intercept * (b - a))
        })
    }

    /// ∫ f(q)² dq in π-units.
    pub fn integral_of_square(&self) -> Rational {
        let (two, three) = (int(2), int(3));
        self.pieces.iter().fold(Rational::zero(), |acc, p| {
            let (a, b) = (p.lo.value(), p.hi.value());
            let (m, c) = (&p.affine.slope, &p.affine.intercept);
            let cube = |x: &Rational| x * x * x;
            let sq = |x: &Rational| x * x;
            acc + m * m * (cube(b) - cube(a)) / &three + &two * m * c * (sq(b) - sq(a)) / &two + c * c * (b - a)
        })
    }
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    piece: [PiRational; 2],
    alpha: String,
    beta: String,
}

impl Serialize for PiecewiseLinear {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let out: Vec<PieceJson> = self
            .pieces
            .iter()
            .map(|p| PieceJson {
                piece: [p.lo.clone(), p.hi.clone()],
                alpha: format_rational(&p.affine.slope),
                beta: format_rational(&p.affine.intercept),
            })
            .collect();
        out.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseLinear {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<PieceJson> = Vec::deserialize(d)?;
        let mut pieces = Vec::with_capacity(raw.len());
        for (i, p) in raw.into_iter().enumerate() {
            let slope =
                parse_rational(&p.alpha).map_err(|e| serde::de::Error::custom(format!("piece {i}: alpha: {e}")))?;
            let intercept =
                parse_rational(&p.beta).map_err(|e| serde::de::Error::custom(format!("piece {i}: beta: {e}")))?;
            let [lo, hi] = p.piece;
            pieces.push(Piece::new(lo, hi, Affine::new(slope, intercept)));
        }
        PiecewiseLinear::new(pieces).map_err(serde::de::Error::custom)
    }
}
