//! The strategy contract and built-in strategies.
//!
//! A strategy is a deterministic pure function of the position. Optional
//! extras: `stability_radius` reports how far the opponent's last center may
//! be perturbed with the response staying legal, and `limit_certificate`
//! names the closed-form intersection point of continued self-play so finite
//! runs can be adjudicated by a point query.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{scheduled_radius, GameParams, Position, Variant};
use crate::rat::Rat;
use crate::space::{Ball, BairePoint, Point, SpaceKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyError {
    pub reason: String,
}

impl StrategyError {
    pub fn new(reason: impl Into<String>) -> StrategyError {
        StrategyError { reason: reason.into() }
    }
}

impl fmt::Display for StrategyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reason)
    }
}

impl std::error::Error for StrategyError {}

pub trait Strategy {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError>;

    /// Largest exact slack within which the response at `pos` stays legal if
    /// the opponent's last center is perturbed by less than it. Tangent
    /// responders return zero.
    fn stability_radius(&self, _pos: &Position) -> Option<Rat> {
        None
    }

    /// Closed-form limit of continued self-play from `pos`, if known.
    fn limit_certificate(&self, _pos: &Position) -> Option<Point> {
        None
    }
}

/// Rational unit direction: a sign on the line, a vector with sum of squared
/// coordinates exactly 1 in Euclidean space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Direction {
    Left,
    Right,
    Vector(Vec<Rat>),
}

impl Direction {
    pub fn vector(v: Vec<Rat>) -> Result<Direction, StrategyError> {
        if v.len() < 2 {
            return Err(StrategyError::new("direction vector needs dimension >= 2"));
        }
        let norm_sq = v.iter().fold(Rat::zero(), |acc, c| acc + c.square());
        if norm_sq != Rat::one() {
            return Err(StrategyError::new(format!(
                "direction is not a unit vector (|v|^2 = {})",
                norm_sq
            )));
        }
        Ok(Direction::Vector(v))
    }

    /// Offset vector of length `scale` in this direction.
    pub fn offset(&self, scale: &Rat) -> Vec<Rat> {
        match self {
            Direction::Left => vec![-scale],
            Direction::Right => vec![scale.clone()],
            Direction::Vector(v) => v.iter().map(|c| c * scale).collect(),
        }
    }

    pub fn opposite(&self) -> Direction {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
            Direction::Vector(v) => Direction::Vector(v.iter().map(|c| -c).collect()),
        }
    }
}

/// Next mover's radius: the schedule where one exists, otherwise (free first
/// move, Banach-Mazur) the parity-matched shrink factor times the previous
/// radius.
fn shrunk_radius(params: &GameParams, pos: &Position) -> Result<Rat, StrategyError> {
    let prev = pos
        .last()
        .ok_or_else(|| StrategyError::new("no previous ball; wrap with a first move"))?;
    Ok(match scheduled_radius(params, pos) {
        Some(r) => r,
        None => params.shrink_factor(pos.turn()) * &prev.radius,
    })
}

/// Moves the center by exactly (r_prev - r_new) in a fixed direction: every
/// move is tangent to the previous ball's boundary.
pub struct TangentToward {
    params: GameParams,
    dir: Direction,
}

pub fn tangent_toward(params: GameParams, dir: Direction) -> TangentToward {
    TangentToward { params, dir }
}

impl Strategy for TangentToward {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        let prev = pos
            .last()
            .ok_or_else(|| StrategyError::new("tangent strategy has no first move"))?;
        let r_new = shrunk_radius(&self.params, pos)?;
        let slack = &prev.radius - &r_new;
        match (&prev.center, &self.dir) {
            (Point::Line(_), Direction::Vector(_)) => {
                Err(StrategyError::new("vector direction on the line"))
            }
            (Point::Euclid(_), Direction::Left | Direction::Right) => {
                Err(StrategyError::new("scalar direction in euclidean space"))
            }
            (Point::Baire(_), _) => Err(StrategyError::new("tangent strategy in Baire space")),
            _ => {
                let center = prev
                    .center
                    .translate(&self.dir.offset(&slack))
                    .map_err(|e| StrategyError::new(e.to_string()))?;
                Ok(Ball::new(center, r_new))
            }
        }
    }

    fn stability_radius(&self, _pos: &Position) -> Option<Rat> {
        Some(Rat::zero())
    }
}

/// Keeps the previous center and shrinks the radius.
pub struct Concentric {
    params: GameParams,
}

pub fn concentric(params: GameParams) -> Concentric {
    Concentric { params }
}

impl Strategy for Concentric {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        let prev = pos
            .last()
            .ok_or_else(|| StrategyError::new("concentric strategy has no first move"))?;
        let r_new = shrunk_radius(&self.params, pos)?;
        Ok(Ball::new(prev.center.clone(), r_new))
    }

    fn stability_radius(&self, pos: &Position) -> Option<Rat> {
        let prev = pos.last()?;
        let r_new = shrunk_radius(&self.params, pos).ok()?;
        Some(&prev.radius - &r_new)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Anchor {
    Point(Point),
    /// Distance from the first coordinate axis of Euclidean space.
    XAxis,
}

/// Moves radially away from the anchor by the full slack (a tangent move).
/// In Euclidean space the exact radial direction is used whenever the
/// distance to the anchor is rational; otherwise the strategy falls back to
/// the best axis-aligned direction, which still gains a positive fraction of
/// the slack and keeps all arithmetic exact.
pub struct MaximizeDistanceFrom {
    params: GameParams,
    anchor: Anchor,
}

pub fn maximize_distance_from(params: GameParams, anchor: Anchor) -> MaximizeDistanceFrom {
    MaximizeDistanceFrom { params, anchor }
}

/// Outward offset of length `slack`: exact radial when |diff| is rational,
/// otherwise axis-aligned along the largest component. `skip_first` excludes
/// coordinate 0 from consideration (axis-anchored case); `default_axis` is
/// used when diff is the zero vector.
fn outward_offset(diff: &[Rat], slack: &Rat, default_axis: usize) -> Vec<Rat> {
    let dim = diff.len();
    let mut offset = vec![Rat::zero(); dim];
    if diff.iter().all(|c| c.is_zero()) {
        offset[default_axis] = slack.clone();
        return offset;
    }
    let norm_sq = diff.iter().fold(Rat::zero(), |acc, c| acc + c.square());
    if let Some(norm) = norm_sq.sqrt_exact() {
        let f = slack / &norm;
        return diff.iter().map(|c| c * &f).collect();
    }
    let mut best = 0;
    for i in 1..dim {
        if diff[i].abs() > diff[best].abs() {
            best = i;
        }
    }
    offset[best] = if diff[best].is_negative() {
        -slack
    } else {
        slack.clone()
    };
    offset
}

impl Strategy for MaximizeDistanceFrom {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        let prev = pos
            .last()
            .ok_or_else(|| StrategyError::new("maxdist strategy has no first move"))?;
        let r_new = shrunk_radius(&self.params, pos)?;
        let slack = &prev.radius - &r_new;
        let center = match (&prev.center, &self.anchor) {
            (Point::Line(c), Anchor::Point(Point::Line(p))) => {
                Point::Line(if *c >= *p { c + &slack } else { c - &slack })
            }
            (Point::Euclid(v), Anchor::Point(Point::Euclid(p))) if v.len() == p.len() => {
                let diff: Vec<Rat> = v.iter().zip(p).map(|(a, b)| a - b).collect();
                let off = outward_offset(&diff, &slack, 0);
                prev.center
                    .translate(&off)
                    .map_err(|e| StrategyError::new(e.to_string()))?
            }
            (Point::Euclid(v), Anchor::XAxis) => {
                let mut diff = v.clone();
                diff[0] = Rat::zero();
                let off = outward_offset(&diff, &slack, 1);
                prev.center
                    .translate(&off)
                    .map_err(|e| StrategyError::new(e.to_string()))?
            }
            _ => {
                return Err(StrategyError::new(
                    "anchor does not match the space of play",
                ))
            }
        };
        Ok(Ball::new(center, r_new))
    }

    fn stability_radius(&self, _pos: &Position) -> Option<Rat> {
        Some(Rat::zero())
    }
}

/// Rationals of the open interval (a, b), ordered by denominator then
/// numerator, reduced forms only.
pub fn enumerate_rationals(a: &Rat, b: &Rat, count: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(count);
    let mut den = BigInt::one();
    while out.len() < count {
        let mut p: BigInt = (a * &Rat::from_bigint(den.clone())).floor_int() + 1;
        loop {
            let q = Rat::from_frac(p.clone(), den.clone());
            if q >= *b {
                break;
            }
            if q > *a && p.gcd(&den).is_one() {
                out.push(q);
                if out.len() == count {
                    return out;
                }
            }
            p += 1;
        }
        den += 1;
    }
    out
}

/// The k-th rational of (a, b) in the enumeration order above.
pub fn nth_rational(a: &Rat, b: &Rat, k: usize) -> Rat {
    enumerate_rationals(a, b, k + 1)
        .pop()
        .expect("open interval enumeration is infinite")
}

/// Player I strategy for the line: at avoidance stage k it plays the extreme
/// sub-ball (right first) whose closed ball excludes the k-th rational of the
/// enumeration. With beta < 1/2 the two candidate balls are disjoint, so at
/// least one excludes any given point.
pub struct AvoidEnumeration {
    params: GameParams,
    a: Rat,
    b: Rat,
}

pub fn avoid_enumeration(
    params: GameParams,
    a: Rat,
    b: Rat,
) -> Result<AvoidEnumeration, StrategyError> {
    if params.beta >= crate::rat::rat(1, 2) {
        return Err(StrategyError::new(
            "avoidance needs beta < 1/2 (candidate balls must be disjoint)",
        ));
    }
    if params.variant == Variant::NonTangentSchmidt {
        return Err(StrategyError::new(
            "avoidance plays tangent balls; non-tangent variant unsupported",
        ));
    }
    if a >= b {
        return Err(StrategyError::new("empty enumeration interval"));
    }
    Ok(AvoidEnumeration { params, a, b })
}

impl Strategy for AvoidEnumeration {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        let turn = pos.turn();
        if turn == 0 {
            return Err(StrategyError::new(
                "avoidance has no first move; wrap with a first move",
            ));
        }
        if turn % 2 != 0 {
            return Err(StrategyError::new("avoidance is a player-I strategy"));
        }
        let prev = pos.last().expect("nonempty");
        let Point::Line(c) = &prev.center else {
            return Err(StrategyError::new("avoidance strategy lives on the line"));
        };
        let stage = turn / 2 - 1;
        let q = nth_rational(&self.a, &self.b, stage);
        let r_new = shrunk_radius(&self.params, pos)?;
        let shift = &prev.radius - &r_new;
        for cand in [c + &shift, c - &shift] {
            if (&q - &cand).abs() > r_new {
                return Ok(Ball::new(Point::Line(cand), r_new.clone()));
            }
        }
        Err(StrategyError::new(format!(
            "neither extreme ball avoids {} (beta < 1/2 violated?)",
            q
        )))
    }

    fn stability_radius(&self, _pos: &Position) -> Option<Rat> {
        Some(Rat::zero())
    }
}

/// Plays a fixed list of balls, indexed by own-move ordinal.
pub struct Scripted {
    pub moves: Vec<Ball>,
}

impl Strategy for Scripted {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        self.moves
            .get(pos.turn() / 2)
            .cloned()
            .ok_or_else(|| StrategyError::new("script exhausted"))
    }
}

/// Prepends a fixed first move to an inner strategy (player I use).
pub struct WithFirstMove {
    pub first: Ball,
    pub inner: Box<dyn Strategy>,
}

impl Strategy for WithFirstMove {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        if pos.last().is_none() {
            Ok(self.first.clone())
        } else {
            self.inner.next(pos)
        }
    }

    fn stability_radius(&self, pos: &Position) -> Option<Rat> {
        self.inner.stability_radius(pos)
    }

    fn limit_certificate(&self, pos: &Position) -> Option<Point> {
        self.inner.limit_certificate(pos)
    }
}

/// Attaches a closed-form limit certificate to an inner strategy. The engine
/// validates the claim against the enclosing ball before using it.
pub struct WithLimit {
    pub inner: Box<dyn Strategy>,
    pub limit: Point,
}

impl Strategy for WithLimit {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        self.inner.next(pos)
    }

    fn stability_radius(&self, pos: &Position) -> Option<Rat> {
        self.inner.stability_radius(pos)
    }

    fn limit_certificate(&self, _pos: &Position) -> Option<Point> {
        Some(self.limit.clone())
    }
}

/// Limit point of a tangent duel from first ball `first`: I always tangent
/// toward `dir_i`, II always tangent toward `dir_ii`. Summing the two
/// geometric displacement series gives
/// c0 + dir_ii * rho(1-a)/(1-ab) + dir_i * a rho(1-b)/(1-ab).
pub fn tangent_duel_limit(
    params: &GameParams,
    first: &Ball,
    dir_i: &Direction,
    dir_ii: &Direction,
) -> Result<Point, StrategyError> {
    let rho = &first.radius;
    let ab = &params.alpha * &params.beta;
    let denom = Rat::one() - &ab;
    let mag_ii = rho * (Rat::one() - &params.alpha) / &denom;
    let mag_i = &params.alpha * rho * (Rat::one() - &params.beta) / &denom;
    first
        .center
        .translate(&dir_ii.offset(&mag_ii))
        .and_then(|p| p.translate(&dir_i.offset(&mag_i)))
        .map_err(|e| StrategyError::new(e.to_string()))
}

/// Both sides of a tangent duel, each carrying the shared limit certificate.
pub fn tangent_duel_pair(
    params: &GameParams,
    first: Ball,
    dir_i: Direction,
    dir_ii: Direction,
) -> Result<(Box<dyn Strategy>, Box<dyn Strategy>), StrategyError> {
    let limit = tangent_duel_limit(params, &first, &dir_i, &dir_ii)?;
    let i: Box<dyn Strategy> = Box::new(WithFirstMove {
        first,
        inner: Box::new(WithLimit {
            inner: Box::new(tangent_toward(params.clone(), dir_i)),
            limit: limit.clone(),
        }),
    });
    let ii: Box<dyn Strategy> = Box::new(WithLimit {
        inner: Box::new(tangent_toward(params.clone(), dir_ii)),
        limit,
    });
    Ok((i, ii))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Seeded random legal mover, deterministic in (seed, turn, last ball). Never
/// plays an exactly tangent ball, so its moves are legal in every variant.
/// Used by the verification suites to generate rule-following continuations.
pub struct RandomRuleFollowing {
    params: GameParams,
    space: SpaceKind,
    seed: u64,
}

pub fn random_rule_following(
    params: GameParams,
    space: SpaceKind,
    seed: u64,
) -> RandomRuleFollowing {
    RandomRuleFollowing { params, space, seed }
}

impl RandomRuleFollowing {
    fn rng_at(&self, pos: &Position) -> ChaCha8Rng {
        let fingerprint = match pos.last() {
            Some(b) => format!("{}|{}|{}", pos.turn(), b.center, b.radius),
            None => "start".to_string(),
        };
        ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(fingerprint.as_bytes()))
    }

    fn random_coord(rng: &mut ChaCha8Rng) -> Rat {
        crate::rat::rat(rng.gen_range(-8..=8), 4)
    }

    fn first_ball(&self, rng: &mut ChaCha8Rng) -> Ball {
        let radius = self.params.rho.clone().unwrap_or_else(Rat::one);
        let center = match self.space {
            SpaceKind::Line => Point::Line(Self::random_coord(rng)),
            SpaceKind::Euclid(n) => {
                Point::Euclid((0..n).map(|_| Self::random_coord(rng)).collect())
            }
            SpaceKind::Baire => {
                let len = rng.gen_range(0..3);
                let stem = (0..len).map(|_| rng.gen_range(0..4)).collect();
                Point::Baire(BairePoint::new(stem, 0))
            }
        };
        Ball::new(center, radius)
    }

    fn baire_step(&self, rng: &mut ChaCha8Rng, prev: &Ball, r_new: Rat, slack: &Rat) -> Ball {
        let Point::Baire(c) = &prev.center else {
            unreachable!("baire space position");
        };
        if rng.gen_range(0..8) == 0 {
            return Ball::new(prev.center.clone(), r_new);
        }
        let mut n_min: u32 = 0;
        while Rat::pow2_neg(n_min + 1) > *slack {
            n_min += 1;
            assert!(n_min < 10_000, "slack too small");
        }
        let mut j = n_min + rng.gen_range(0..3);
        if self.params.variant == Variant::NonTangentSchmidt && Rat::pow2_neg(j + 1) == *slack {
            j += 1;
        }
        let mut stem: Vec<i64> = (0..j as usize).map(|i| c.coord(i)).collect();
        stem.push(c.coord(j as usize) + 1 + rng.gen_range(0..2));
        Ball::new(Point::Baire(BairePoint::new(stem, 0)), r_new)
    }
}

impl Strategy for RandomRuleFollowing {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        let mut rng = self.rng_at(pos);
        let Some(prev) = pos.last() else {
            return Ok(self.first_ball(&mut rng));
        };
        let r_new = shrunk_radius(&self.params, pos)?;
        let slack = &prev.radius - &r_new;
        let ball = match &prev.center {
            Point::Line(c) => {
                let mag = &slack * &crate::rat::rat(rng.gen_range(0..8), 8);
                let center = if rng.gen_bool(0.5) { c + &mag } else { c - &mag };
                Ball::new(Point::Line(center), r_new)
            }
            Point::Euclid(v) => {
                let axis = rng.gen_range(0..v.len());
                let mag = &slack * &crate::rat::rat(rng.gen_range(0..8), 8);
                let mut center = v.clone();
                if rng.gen_bool(0.5) {
                    center[axis] = &center[axis] + &mag;
                } else {
                    center[axis] = &center[axis] - &mag;
                }
                Ball::new(Point::Euclid(center), r_new)
            }
            Point::Baire(_) => self.baire_step(&mut rng, prev, r_new, &slack),
        };
        Ok(ball)
    }
}
