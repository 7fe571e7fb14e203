//! Points, balls, and exact metric predicates for the three supported spaces:
//! the real line, Euclidean space of fixed dimension n >= 2, and Baire space
//! restricted to eventually-constant integer sequences.
//!
//! Euclidean distances are never materialized; every comparison goes through
//! squared quantities, so tangency (an exact equality) is always decided
//! correctly. Baire distances are powers of two and therefore exact rationals.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::rat::Rat;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpaceKind {
    Line,
    /// Fixed dimension, at least 2.
    Euclid(usize),
    Baire,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Line => write!(f, "line"),
            SpaceKind::Euclid(n) => write!(f, "euclid:{}", n),
            SpaceKind::Baire => write!(f, "baire"),
        }
    }
}

/// Eventually-constant integer sequence: `stem` then `tail` repeated forever.
/// Canonical form strips trailing stem entries equal to the tail, so equality
/// of values coincides with structural equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BairePoint {
    stem: Vec<i64>,
    tail: i64,
}

impl BairePoint {
    pub fn new(mut stem: Vec<i64>, tail: i64) -> BairePoint {
        while stem.last() == Some(&tail) {
            stem.pop();
        }
        BairePoint { stem, tail }
    }

    pub fn constant(tail: i64) -> BairePoint {
        BairePoint { stem: Vec::new(), tail }
    }

    pub fn stem(&self) -> &[i64] {
        &self.stem
    }

    pub fn tail(&self) -> i64 {
        self.tail
    }

    pub fn coord(&self, i: usize) -> i64 {
        *self.stem.get(i).unwrap_or(&self.tail)
    }

    /// Least index where the sequences disagree; None means equal points.
    pub fn first_disagreement(&self, other: &BairePoint) -> Option<usize> {
        let n = self.stem.len().max(other.stem.len());
        (0..n).find(|&i| self.coord(i) != other.coord(i)).or({
            if self.tail == other.tail {
                None
            } else {
                Some(n)
            }
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Point {
    Line(Rat),
    Euclid(Vec<Rat>),
    Baire(BairePoint),
}

impl Point {
    pub fn line(x: Rat) -> Point {
        Point::Line(x)
    }

    pub fn euclid(coords: Vec<Rat>) -> Point {
        assert!(coords.len() >= 2, "euclid dimension must be >= 2");
        Point::Euclid(coords)
    }

    pub fn space(&self) -> SpaceKind {
        match self {
            Point::Line(_) => SpaceKind::Line,
            Point::Euclid(v) => SpaceKind::Euclid(v.len()),
            Point::Baire(_) => SpaceKind::Baire,
        }
    }

    /// Componentwise translation; only line and Euclid points support it.
    pub fn translate(&self, offset: &[Rat]) -> Result<Point, SpaceError> {
        match self {
            Point::Line(x) => {
                if offset.len() != 1 {
                    return Err(SpaceError::MixedSpaces);
                }
                Ok(Point::Line(x + &offset[0]))
            }
            Point::Euclid(v) => {
                if offset.len() != v.len() {
                    return Err(SpaceError::MixedSpaces);
                }
                Ok(Point::Euclid(
                    v.iter().zip(offset).map(|(a, b)| a + b).collect(),
                ))
            }
            Point::Baire(_) => Err(SpaceError::Unsupported("translate in Baire space")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    MixedSpaces,
    NonPositiveRadius,
    Unsupported(&'static str),
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::MixedSpaces => write!(f, "points from different spaces"),
            SpaceError::NonPositiveRadius => write!(f, "ball radius must be positive"),
            SpaceError::Unsupported(what) => write!(f, "unsupported operation: {}", what),
        }
    }
}

impl std::error::Error for SpaceError {}

fn same_space(p: &Point, q: &Point) -> Result<SpaceKind, SpaceError> {
    let (a, b) = (p.space(), q.space());
    if a == b {
        Ok(a)
    } else {
        Err(SpaceError::MixedSpaces)
    }
}

/// Squared Euclidean distance (also defined on the line).
pub fn dist_sq(p: &Point, q: &Point) -> Result<Rat, SpaceError> {
    match (p, q) {
        (Point::Line(a), Point::Line(b)) => {
            let d = a - b;
            Ok(&d * &d)
        }
        (Point::Euclid(a), Point::Euclid(b)) if a.len() == b.len() => {
            let mut acc = Rat::zero();
            for (x, y) in a.iter().zip(b) {
                let d = x - y;
                acc = acc + &d * &d;
            }
            Ok(acc)
        }
        _ => Err(SpaceError::MixedSpaces),
    }
}

/// Exact distance when it is a rational number: always on the line and in
/// Baire space, and in Euclidean space exactly when the squared distance is a
/// perfect square.
pub fn dist_exact(p: &Point, q: &Point) -> Result<Option<Rat>, SpaceError> {
    match same_space(p, q)? {
        SpaceKind::Line | SpaceKind::Euclid(_) => Ok(dist_sq(p, q)?.sqrt_exact()),
        SpaceKind::Baire => {
            let (Point::Baire(a), Point::Baire(b)) = (p, q) else {
                unreachable!()
            };
            Ok(Some(match a.first_disagreement(b) {
                None => Rat::zero(),
                Some(n) => Rat::pow2_neg(n as u32 + 1),
            }))
        }
    }
}

/// Exact ordering of d(p,q) versus the threshold t.
pub fn dist_cmp(p: &Point, q: &Point, t: &Rat) -> Result<Ordering, SpaceError> {
    match same_space(p, q)? {
        SpaceKind::Line => {
            let (Point::Line(a), Point::Line(b)) = (p, q) else {
                unreachable!()
            };
            Ok((a - b).abs().cmp_rat(t))
        }
        SpaceKind::Euclid(_) => {
            if t.is_negative() {
                return Ok(Ordering::Greater);
            }
            Ok(dist_sq(p, q)?.cmp_rat(&t.square()))
        }
        SpaceKind::Baire => {
            let d = dist_exact(p, q)?.expect("baire distance is exact");
            Ok(d.cmp_rat(t))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ball {
    pub center: Point,
    pub radius: Rat,
}

impl Ball {
    /// Panics on a non-positive radius; use `try_new` on untrusted input.
    pub fn new(center: Point, radius: Rat) -> Ball {
        assert!(radius.is_positive(), "ball radius must be positive");
        Ball { center, radius }
    }

    pub fn try_new(center: Point, radius: Rat) -> Result<Ball, SpaceError> {
        if radius.is_positive() {
            Ok(Ball { center, radius })
        } else {
            Err(SpaceError::NonPositiveRadius)
        }
    }

    pub fn space(&self) -> SpaceKind {
        self.center.space()
    }

    /// Exact membership of a point in this closed ball.
    pub fn contains(&self, p: &Point) -> Result<bool, SpaceError> {
        Ok(dist_cmp(&self.center, p, &self.radius)? != Ordering::Greater)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Nesting {
    Nested,
    Tangent,
    NotNested,
}

/// Exact classification of `inner` against `outer`:
/// Nested iff d(centers) < r_outer - r_inner, Tangent on equality.
pub fn ball_nested(outer: &Ball, inner: &Ball) -> Result<Nesting, SpaceError> {
    same_space(&outer.center, &inner.center)?;
    let margin = &outer.radius - &inner.radius;
    if margin.is_negative() {
        return Ok(Nesting::NotNested);
    }
    Ok(match dist_cmp(&outer.center, &inner.center, &margin)? {
        Ordering::Less => Nesting::Nested,
        Ordering::Equal => Nesting::Tangent,
        Ordering::Greater => Nesting::NotNested,
    })
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Line(x) => write!(f, "[{}]", x),
            Point::Euclid(v) => {
                write!(f, "[")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, "]")
            }
            Point::Baire(b) => {
                write!(f, "[")?;
                for (i, c) in b.stem().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, ";{}]", b.tail())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointParseError {
    pub input: String,
}

impl fmt::Display for PointParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid point {:?}", self.input)
    }
}

impl std::error::Error for PointParseError {}

impl FromStr for Point {
    type Err = PointParseError;

    /// `[x]` line, `[x,y,...]` Euclid, `[s0,...,sk;t]` Baire (stem may be empty).
    fn from_str(s: &str) -> Result<Point, PointParseError> {
        let bad = || PointParseError { input: s.to_string() };
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        if let Some((stem_part, tail_part)) = inner.split_once(';') {
            let stem = if stem_part.trim().is_empty() {
                Vec::new()
            } else {
                stem_part
                    .split(',')
                    .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let tail = tail_part.trim().parse::<i64>().map_err(|_| bad())?;
            return Ok(Point::Baire(BairePoint::new(stem, tail)));
        }
        let coords = inner
            .split(',')
            .map(|c| c.trim().parse::<Rat>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        match coords.len() {
            0 => Err(bad()),
            1 => Ok(Point::Line(coords.into_iter().next().unwrap())),
            _ => Ok(Point::Euclid(coords)),
        }
    }
}
