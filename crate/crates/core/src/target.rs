//! Tri-valued target-set oracles.
//!
//! A target answers point membership with In/Out/Unknown and ball queries with
//! Yes/No/Unknown. Soundness contract: `ball_inside = Yes` means every point of
//! the ball is in the set, `ball_disjoint = Yes` means every point is outside.
//! Unknown is the honest answer wherever a finite certificate does not exist;
//! sets like the rationals admit no ball certificates at all.
//!
//! Note that only exactly-representable points can ever be queried, so
//! `rationals().point_query` is In on every queryable line point; its ball
//! queries still answer No because real balls are never inside (or disjoint
//! from) the rationals.

use std::fmt;

use crate::rat::Rat;
use crate::space::{dist_cmp, Ball, Point, SpaceError, SpaceKind};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BallAnswer {
    Yes,
    No,
    Unknown,
}

pub trait TargetSet {
    fn space(&self) -> SpaceKind;
    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError>;
    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError>;
    fn ball_disjoint(&self, b: &Ball) -> Result<BallAnswer, SpaceError>;
}

fn line_coord(p: &Point) -> Result<&Rat, SpaceError> {
    match p {
        Point::Line(x) => Ok(x),
        _ => Err(SpaceError::MixedSpaces),
    }
}

fn line_ball(b: &Ball) -> Result<(&Rat, &Rat), SpaceError> {
    match &b.center {
        Point::Line(c) => Ok((c, &b.radius)),
        _ => Err(SpaceError::MixedSpaces),
    }
}

/// (-inf, -1] union [1, inf) union Q on the line.
pub struct RayUnionQ;

impl TargetSet for RayUnionQ {
    fn space(&self) -> SpaceKind {
        SpaceKind::Line
    }

    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError> {
        line_coord(p)?;
        // every representable point is rational, hence in Q
        Ok(Membership::In)
    }

    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let (c, r) = line_ball(b)?;
        let hi = c + r;
        let lo = c - r;
        if hi <= Rat::int(-1) || lo >= Rat::int(1) {
            Ok(BallAnswer::Yes)
        } else {
            // the ball meets (-1,1) on an interval, which contains irrationals
            Ok(BallAnswer::No)
        }
    }

    fn ball_disjoint(&self, _b: &Ball) -> Result<BallAnswer, SpaceError> {
        Ok(BallAnswer::No)
    }
}

/// The rationals on the line.
pub struct Rationals;

impl TargetSet for Rationals {
    fn space(&self) -> SpaceKind {
        SpaceKind::Line
    }

    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError> {
        line_coord(p)?;
        Ok(Membership::In)
    }

    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        line_ball(b)?;
        Ok(BallAnswer::No)
    }

    fn ball_disjoint(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        line_ball(b)?;
        Ok(BallAnswer::No)
    }
}

/// The irrationals on the line. Queryable points are all Out; ball queries are
/// No in both directions for the same density reasons as `Rationals`.
pub struct CoRationals;

impl TargetSet for CoRationals {
    fn space(&self) -> SpaceKind {
        SpaceKind::Line
    }

    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError> {
        line_coord(p)?;
        Ok(Membership::Out)
    }

    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        line_ball(b)?;
        Ok(BallAnswer::No)
    }

    fn ball_disjoint(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        line_ball(b)?;
        Ok(BallAnswer::No)
    }
}

/// Closed interval [a, b] on the line; all three queries are exact.
pub struct IntervalTarget {
    a: Rat,
    b: Rat,
}

impl IntervalTarget {
    pub fn new(a: Rat, b: Rat) -> Result<IntervalTarget, SpaceError> {
        if a > b {
            return Err(SpaceError::Unsupported("empty interval target"));
        }
        Ok(IntervalTarget { a, b })
    }
}

impl TargetSet for IntervalTarget {
    fn space(&self) -> SpaceKind {
        SpaceKind::Line
    }

    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError> {
        let x = line_coord(p)?;
        Ok(if *x >= self.a && *x <= self.b {
            Membership::In
        } else {
            Membership::Out
        })
    }

    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let (c, r) = line_ball(b)?;
        Ok(if c - r >= self.a && c + r <= self.b {
            BallAnswer::Yes
        } else {
            BallAnswer::No
        })
    }

    fn ball_disjoint(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let (c, r) = line_ball(b)?;
        Ok(if c + r < self.a || c - r > self.b {
            BallAnswer::Yes
        } else {
            BallAnswer::No
        })
    }
}

/// Closed ray on the line: (-inf, a] or [a, inf).
pub struct RayTarget {
    a: Rat,
    upward: bool,
}

impl RayTarget {
    pub fn le(a: Rat) -> RayTarget {
        RayTarget { a, upward: false }
    }

    pub fn ge(a: Rat) -> RayTarget {
        RayTarget { a, upward: true }
    }
}

impl TargetSet for RayTarget {
    fn space(&self) -> SpaceKind {
        SpaceKind::Line
    }

    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError> {
        let x = line_coord(p)?;
        let inside = if self.upward { *x >= self.a } else { *x <= self.a };
        Ok(if inside { Membership::In } else { Membership::Out })
    }

    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let (c, r) = line_ball(b)?;
        let inside = if self.upward {
            c - r >= self.a
        } else {
            c + r <= self.a
        };
        Ok(if inside { BallAnswer::Yes } else { BallAnswer::No })
    }

    fn ball_disjoint(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let (c, r) = line_ball(b)?;
        let disjoint = if self.upward {
            c + r < self.a
        } else {
            c - r > self.a
        };
        Ok(if disjoint { BallAnswer::Yes } else { BallAnswer::No })
    }
}

/// The whole space; II wins immediately.
pub struct WholeSpace(pub SpaceKind);

impl TargetSet for WholeSpace {
    fn space(&self) -> SpaceKind {
        self.0
    }

    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError> {
        if p.space() != self.0 {
            return Err(SpaceError::MixedSpaces);
        }
        Ok(Membership::In)
    }

    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        if b.space() != self.0 {
            return Err(SpaceError::MixedSpaces);
        }
        Ok(BallAnswer::Yes)
    }

    fn ball_disjoint(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        if b.space() != self.0 {
            return Err(SpaceError::MixedSpaces);
        }
        Ok(BallAnswer::No)
    }
}

/// Answers Unknown everywhere; useful for pure simulation runs where the game
/// should go the full depth.
pub struct Opaque(pub SpaceKind);

impl TargetSet for Opaque {
    fn space(&self) -> SpaceKind {
        self.0
    }

    fn point_query(&self, _p: &Point) -> Result<Membership, SpaceError> {
        Ok(Membership::Unknown)
    }

    fn ball_inside(&self, _b: &Ball) -> Result<BallAnswer, SpaceError> {
        Ok(BallAnswer::Unknown)
    }

    fn ball_disjoint(&self, _b: &Ball) -> Result<BallAnswer, SpaceError> {
        Ok(BallAnswer::Unknown)
    }
}

/// Basic clopen cylinder in Baire space: points whose first coordinates equal
/// the stem. Every ball in Baire space is itself a cylinder, so all three
/// queries are exact.
pub struct StemTarget {
    stem: Vec<i64>,
}

impl StemTarget {
    pub fn new(stem: Vec<i64>) -> StemTarget {
        StemTarget { stem }
    }
}

/// Stem of the cylinder a Baire ball coincides with: the least m such that
/// 2^-(m+1) <= r determines agreement on coordinates 0..m.
pub fn baire_ball_stem(b: &Ball) -> Result<Vec<i64>, SpaceError> {
    let Point::Baire(c) = &b.center else {
        return Err(SpaceError::MixedSpaces);
    };
    let mut m = 0u32;
    // r >= 1/2 keeps the whole space; otherwise grow m until 2^-(m+1) <= r
    while Rat::pow2_neg(m + 1) > b.radius {
        m += 1;
        assert!(m < 10_000, "unreasonably small baire radius");
    }
    Ok((0..m as usize).map(|i| c.coord(i)).collect())
}

impl TargetSet for StemTarget {
    fn space(&self) -> SpaceKind {
        SpaceKind::Baire
    }

    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError> {
        let Point::Baire(x) = p else {
            return Err(SpaceError::MixedSpaces);
        };
        let agrees = self.stem.iter().enumerate().all(|(i, &w)| x.coord(i) == w);
        Ok(if agrees { Membership::In } else { Membership::Out })
    }

    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let ball_stem = baire_ball_stem(b)?;
        let extends = ball_stem.len() >= self.stem.len()
            && ball_stem[..self.stem.len()] == self.stem[..];
        Ok(if extends { BallAnswer::Yes } else { BallAnswer::No })
    }

    fn ball_disjoint(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let ball_stem = baire_ball_stem(b)?;
        let k = ball_stem.len().min(self.stem.len());
        let incompatible = ball_stem[..k] != self.stem[..k];
        Ok(if incompatible {
            BallAnswer::Yes
        } else {
            BallAnswer::No
        })
    }
}

/// Union of two targets; ball queries use three-valued logic and are sound but
/// incomplete (a ball covered jointly but by neither part yields Unknown).
pub struct Union {
    left: Box<dyn TargetSet>,
    right: Box<dyn TargetSet>,
}

impl Union {
    pub fn new(left: Box<dyn TargetSet>, right: Box<dyn TargetSet>) -> Result<Union, SpaceError> {
        if left.space() != right.space() {
            return Err(SpaceError::MixedSpaces);
        }
        Ok(Union { left, right })
    }
}

impl TargetSet for Union {
    fn space(&self) -> SpaceKind {
        self.left.space()
    }

    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError> {
        let a = self.left.point_query(p)?;
        let b = self.right.point_query(p)?;
        Ok(match (a, b) {
            (Membership::In, _) | (_, Membership::In) => Membership::In,
            (Membership::Out, Membership::Out) => Membership::Out,
            _ => Membership::Unknown,
        })
    }

    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let l = self.left.ball_inside(b)?;
        let r = self.right.ball_inside(b)?;
        if l == BallAnswer::Yes || r == BallAnswer::Yes {
            return Ok(BallAnswer::Yes);
        }
        // No requires a point outside the union; both parts disjoint gives one
        let ld = self.left.ball_disjoint(b)?;
        let rd = self.right.ball_disjoint(b)?;
        if ld == BallAnswer::Yes && rd == BallAnswer::Yes {
            return Ok(BallAnswer::No);
        }
        Ok(BallAnswer::Unknown)
    }

    fn ball_disjoint(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let l = self.left.ball_disjoint(b)?;
        let r = self.right.ball_disjoint(b)?;
        Ok(match (l, r) {
            (BallAnswer::Yes, BallAnswer::Yes) => BallAnswer::Yes,
            (BallAnswer::No, _) | (_, BallAnswer::No) => BallAnswer::No,
            _ => BallAnswer::Unknown,
        })
    }
}

/// Complement; swaps In/Out and the two ball queries.
pub struct Complement {
    inner: Box<dyn TargetSet>,
}

impl Complement {
    pub fn new(inner: Box<dyn TargetSet>) -> Complement {
        Complement { inner }
    }
}

impl TargetSet for Complement {
    fn space(&self) -> SpaceKind {
        self.inner.space()
    }

    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError> {
        Ok(match self.inner.point_query(p)? {
            Membership::In => Membership::Out,
            Membership::Out => Membership::In,
            Membership::Unknown => Membership::Unknown,
        })
    }

    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        self.inner.ball_disjoint(b)
    }

    fn ball_disjoint(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        self.inner.ball_inside(b)
    }
}

/// Points of the closed ball at exact distance `radius` from the center do not
/// exist as far as `IntervalTarget` is concerned; membership tests rely on
/// `dist_cmp` only. Public so callers can probe sampled points of a ball.
pub fn point_in_closed_ball(b: &Ball, p: &Point) -> Result<bool, SpaceError> {
    Ok(dist_cmp(&b.center, p, &b.radius)? != std::cmp::Ordering::Greater)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetParseError {
    pub msg: String,
}

impl fmt::Display for TargetParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "target: {}", self.msg)
    }
}

impl std::error::Error for TargetParseError {}

/// Extra context needed by `cylinder:<file>`; the coding depends on the game
/// parameters.
pub struct CylinderContext {
    pub alpha: Rat,
    pub beta: Rat,
    pub rho: Rat,
}

/// Target mini-language:
/// `rayq`, `Q`, `coQ`, `interval:a,b`, `cylinder:<file>`, `union(t1,t2)`,
/// `compl(t)`, plus the extras `all:<space>`, `opaque:<space>`, and
/// `stem:n1,n2,...` (Baire cylinder; `stem:` alone is the whole space).
pub fn parse_target(
    expr: &str,
    cyl: Option<&CylinderContext>,
) -> Result<Box<dyn TargetSet>, TargetParseError> {
    let err = |msg: String| TargetParseError { msg };
    let s = expr.trim();
    if s.is_empty() {
        return Err(err("empty target expression".into()));
    }
    if let Some(inner) = strip_call(s, "union") {
        let parts = split_args(inner);
        if parts.len() < 2 {
            return Err(err(format!("union needs at least two arguments: {:?}", s)));
        }
        let mut acc = parse_target(&parts[0], cyl)?;
        for p in &parts[1..] {
            let rhs = parse_target(p, cyl)?;
            acc = Box::new(
                Union::new(acc, rhs).map_err(|e| err(format!("union: {}", e)))?,
            );
        }
        return Ok(acc);
    }
    if let Some(inner) = strip_call(s, "compl") {
        return Ok(Box::new(Complement::new(parse_target(inner, cyl)?)));
    }
    match s {
        "rayq" => return Ok(Box::new(RayUnionQ)),
        "Q" => return Ok(Box::new(Rationals)),
        "coQ" => return Ok(Box::new(CoRationals)),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("interval:") {
        let (a, b) = rest
            .split_once(',')
            .ok_or_else(|| err(format!("interval needs two bounds: {:?}", s)))?;
        let a: Rat = a.trim().parse().map_err(|e| err(format!("{}", e)))?;
        let b: Rat = b.trim().parse().map_err(|e| err(format!("{}", e)))?;
        return IntervalTarget::new(a, b)
            .map(|t| Box::new(t) as Box<dyn TargetSet>)
            .map_err(|e| err(format!("{}", e)));
    }
    if let Some(rest) = s.strip_prefix("stem:") {
        let stem = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| err(format!("bad stem {:?}", rest)))?
        };
        return Ok(Box::new(StemTarget::new(stem)));
    }
    if let Some(rest) = s.strip_prefix("all:") {
        return Ok(Box::new(WholeSpace(parse_space(rest).map_err(err)?)));
    }
    if let Some(rest) = s.strip_prefix("opaque:") {
        return Ok(Box::new(Opaque(parse_space(rest).map_err(err)?)));
    }
    if let Some(path) = s.strip_prefix("cylinder:") {
        let ctx = cyl.ok_or_else(|| {
            err("cylinder target needs alpha, beta, rho context".into())
        })?;
        let text = std::fs::read_to_string(path.trim())
            .map_err(|e| err(format!("reading {:?}: {}", path.trim(), e)))?;
        let rel = crate::cylinder::RelationTable::parse(&text)
            .map_err(|e| err(format!("{}", e)))?;
        let t = crate::cylinder::build_target(&rel, &ctx.alpha, &ctx.beta, &ctx.rho)
            .map_err(|e| err(format!("{}", e)))?;
        return Ok(Box::new(t));
    }
    Err(err(format!("unknown target {:?}", s)))
}

pub fn parse_space(s: &str) -> Result<SpaceKind, String> {
    let s = s.trim();
    match s {
        "line" => Ok(SpaceKind::Line),
        "baire" => Ok(SpaceKind::Baire),
        _ => {
            if let Some(n) = s.strip_prefix("euclid:") {
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad dimension {:?}", s))?;
                if n < 2 {
                    return Err("euclid dimension must be >= 2".into());
                }
                Ok(SpaceKind::Euclid(n))
            } else {
                Err(format!("unknown space {:?}", s))
            }
        }
    }
}

fn strip_call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)?
        .trim_start()
        .strip_prefix('(')?
        .strip_suffix(')')
}

/// Split on top-level commas, then rejoin pieces belonging to `interval:`
/// arguments (whose own comma is not nested in parentheses).
fn split_args(s: &str) -> Vec<String> {
    let mut raw = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                raw.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    raw.push(cur.trim().to_string());
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        let piece = &raw[i];
        let needs_pair =
            piece.starts_with("interval:") && !piece.contains(',') && i + 1 < raw.len();
        if needs_pair {
            out.push(format!("{},{}", piece, raw[i + 1]));
            i += 2;
        } else {
            out.push(piece.clone());
            i += 1;
        }
    }
    out
}
