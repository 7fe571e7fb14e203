//! Game rules, positions, runs, and outcome adjudication.
//!
//! Three variants share one move shape (a closed ball nested in the previous
//! one). Schmidt variants impose the radius schedule rho_2n = (ab)^n rho_0,
//! rho_2n+1 = a(ab)^n rho_0; the non-tangent variant additionally forbids
//! d(centers) + r_new = r_prev exactly; Banach-Mazur drops the radius law.
//! The first player whose move breaks a rule loses on the spot.

use std::fmt;

use crate::rat::Rat;
use crate::space::{ball_nested, dist_cmp, Ball, Nesting, Point, SpaceError, SpaceKind};
use crate::strategy::Strategy;
use crate::target::{BallAnswer, Membership, TargetSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Player {
    I,
    II,
}

impl Player {
    pub fn of_turn(turn: usize) -> Player {
        if turn % 2 == 0 {
            Player::I
        } else {
            Player::II
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::I => Player::II,
            Player::II => Player::I,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::I => write!(f, "I"),
            Player::II => write!(f, "II"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    Schmidt,
    NonTangentSchmidt,
    BanachMazur,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Schmidt => write!(f, "schmidt"),
            Variant::NonTangentSchmidt => write!(f, "non-tangent"),
            Variant::BanachMazur => write!(f, "banach-mazur"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamError {
    AlphaRange,
    BetaRange,
    RhoNonPositive,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::AlphaRange => write!(f, "alpha must lie strictly between 0 and 1"),
            ParamError::BetaRange => write!(f, "beta must lie strictly between 0 and 1"),
            ParamError::RhoNonPositive => write!(f, "rho must be positive"),
        }
    }
}

impl std::error::Error for ParamError {}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GameParams {
    pub alpha: Rat,
    pub beta: Rat,
    /// Fixed first radius; None leaves I's first radius free.
    pub rho: Option<Rat>,
    pub variant: Variant,
}

impl GameParams {
    pub fn new(
        alpha: Rat,
        beta: Rat,
        rho: Option<Rat>,
        variant: Variant,
    ) -> Result<GameParams, ParamError> {
        let unit = |r: &Rat| r.is_positive() && *r < Rat::one();
        if !unit(&alpha) {
            return Err(ParamError::AlphaRange);
        }
        if !unit(&beta) {
            return Err(ParamError::BetaRange);
        }
        if let Some(r) = &rho {
            if !r.is_positive() {
                return Err(ParamError::RhoNonPositive);
            }
        }
        Ok(GameParams { alpha, beta, rho, variant })
    }

    pub fn schmidt(alpha: Rat, beta: Rat, rho: Option<Rat>) -> Result<GameParams, ParamError> {
        GameParams::new(alpha, beta, rho, Variant::Schmidt)
    }

    pub fn non_tangent(alpha: Rat, beta: Rat, rho: Option<Rat>) -> Result<GameParams, ParamError> {
        GameParams::new(alpha, beta, rho, Variant::NonTangentSchmidt)
    }

    /// Banach-Mazur: alpha and beta are irrelevant to the rules and filled
    /// with 1/2 so builtin strategies still have a shrink factor to use.
    pub fn banach_mazur(rho: Option<Rat>) -> Result<GameParams, ParamError> {
        GameParams::new(crate::rat::rat(1, 2), crate::rat::rat(1, 2), rho, Variant::BanachMazur)
    }

    /// Shrink factor applied at `turn` (>= 1) relative to the previous radius:
    /// alpha on II's turns (odd), beta on I's turns (even).
    pub fn shrink_factor(&self, turn: usize) -> &Rat {
        if turn % 2 == 1 {
            &self.alpha
        } else {
            &self.beta
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    /// Banach-Mazur has no radius schedule.
    NoSchedule,
    EmptyTrace,
    Space(SpaceError),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::NoSchedule => write!(f, "banach-mazur games have no radius schedule"),
            EngineError::EmptyTrace => write!(f, "empty trace"),
            EngineError::Space(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for EngineError {}

impl From<SpaceError> for EngineError {
    fn from(e: SpaceError) -> EngineError {
        EngineError::Space(e)
    }
}

/// Scheduled radius at `turn` for first radius `rho0`:
/// (ab)^n rho0 at turn 2n, a(ab)^n rho0 at turn 2n+1.
pub fn required_radius(params: &GameParams, turn: usize, rho0: &Rat) -> Result<Rat, EngineError> {
    if params.variant == Variant::BanachMazur {
        return Err(EngineError::NoSchedule);
    }
    let ab = &params.alpha * &params.beta;
    let n = (turn / 2) as i64;
    let base = ab.pow(n) * rho0;
    Ok(if turn % 2 == 0 { base } else { base * &params.alpha })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MoveVerdict {
    Legal,
    IllegalRadius,
    IllegalNesting,
    IllegalTangent,
}

impl fmt::Display for MoveVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MoveVerdict::Legal => "Legal",
            MoveVerdict::IllegalRadius => "IllegalRadius",
            MoveVerdict::IllegalNesting => "IllegalNesting",
            MoveVerdict::IllegalTangent => "IllegalTangent",
        };
        write!(f, "{}", s)
    }
}

impl std::str::FromStr for MoveVerdict {
    type Err = ();

    fn from_str(s: &str) -> Result<MoveVerdict, ()> {
        match s {
            "Legal" => Ok(MoveVerdict::Legal),
            "IllegalRadius" => Ok(MoveVerdict::IllegalRadius),
            "IllegalNesting" => Ok(MoveVerdict::IllegalNesting),
            "IllegalTangent" => Ok(MoveVerdict::IllegalTangent),
            _ => Err(()),
        }
    }
}

/// Move history. The next mover is I on even `turn()`, II on odd.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Position {
    balls: Vec<Ball>,
}

impl Position {
    pub fn empty() -> Position {
        Position { balls: Vec::new() }
    }

    /// Builds a position checking every move; the index of the offender is
    /// reported on failure.
    pub fn from_balls(
        params: &GameParams,
        balls: impl IntoIterator<Item = Ball>,
    ) -> Result<Position, IllegalMove> {
        let mut pos = Position::empty();
        for ball in balls {
            pos.push_checked(params, ball)?;
        }
        Ok(pos)
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn turn(&self) -> usize {
        self.balls.len()
    }

    pub fn last(&self) -> Option<&Ball> {
        self.balls.last()
    }

    pub fn space(&self) -> Option<SpaceKind> {
        self.balls.first().map(|b| b.space())
    }

    pub fn push_unchecked(&mut self, ball: Ball) {
        self.balls.push(ball);
    }

    pub fn push_checked(&mut self, params: &GameParams, ball: Ball) -> Result<(), IllegalMove> {
        match legal_move(params, self, &ball) {
            Ok(MoveVerdict::Legal) => {
                self.balls.push(ball);
                Ok(())
            }
            Ok(verdict) => {
                Err(IllegalMove { verdict, turn: self.turn(), ball, space_error: None })
            }
            Err(e) => Err(IllegalMove {
                verdict: MoveVerdict::IllegalNesting,
                turn: self.turn(),
                ball,
                space_error: Some(e),
            }),
        }
    }

    pub fn prefix(&self, moves: usize) -> Position {
        Position { balls: self.balls[..moves.min(self.balls.len())].to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IllegalMove {
    pub verdict: MoveVerdict,
    pub turn: usize,
    pub ball: Ball,
    pub space_error: Option<SpaceError>,
}

impl fmt::Display for IllegalMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.space_error {
            Some(e) => write!(f, "move at turn {} rejected: {}", self.turn, e),
            None => write!(
                f,
                "move at turn {} rejected: {} ({} {})",
                self.turn, self.verdict, self.ball.center, self.ball.radius
            ),
        }
    }
}

impl std::error::Error for IllegalMove {}

/// Exact legality verdict for `mv` as the next move of `pos`. Radius problems
/// are reported before nesting problems.
pub fn legal_move(params: &GameParams, pos: &Position, mv: &Ball) -> Result<MoveVerdict, SpaceError> {
    match pos.last() {
        None => {
            if let Some(rho) = &params.rho {
                if mv.radius != *rho {
                    return Ok(MoveVerdict::IllegalRadius);
                }
            }
            Ok(MoveVerdict::Legal)
        }
        Some(prev) => {
            if prev.space() != mv.space() {
                return Err(SpaceError::MixedSpaces);
            }
            match params.variant {
                Variant::Schmidt | Variant::NonTangentSchmidt => {
                    let expected = params.shrink_factor(pos.turn()) * &prev.radius;
                    if mv.radius != expected {
                        return Ok(MoveVerdict::IllegalRadius);
                    }
                }
                Variant::BanachMazur => {
                    if mv.radius > prev.radius {
                        return Ok(MoveVerdict::IllegalRadius);
                    }
                }
            }
            Ok(match ball_nested(prev, mv)? {
                Nesting::Nested => MoveVerdict::Legal,
                Nesting::Tangent => {
                    if params.variant == Variant::NonTangentSchmidt {
                        MoveVerdict::IllegalTangent
                    } else {
                        MoveVerdict::Legal
                    }
                }
                Nesting::NotNested => MoveVerdict::IllegalNesting,
            })
        }
    }
}

/// Next mover's scheduled radius, when the rules pin one down: the fixed rho
/// on the first move, the shrink factor times the previous radius afterwards.
/// None means the radius is the mover's choice (free first move, or any
/// Banach-Mazur move).
pub fn scheduled_radius(params: &GameParams, pos: &Position) -> Option<Rat> {
    match pos.last() {
        None => params.rho.clone(),
        Some(prev) => match params.variant {
            Variant::Schmidt | Variant::NonTangentSchmidt => {
                Some(params.shrink_factor(pos.turn()) * &prev.radius)
            }
            Variant::BanachMazur => None,
        },
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Certificate {
    /// Ball certified inside the target: II has won.
    BallInside(Ball),
    /// Ball certified disjoint from the target: I has won.
    BallDisjoint(Ball),
    /// A strategy's closed-form limit point, adjudicated by point_query.
    LimitPoint { point: Point, claimed_by: Player },
    /// Rule violation by `by`; the opponent wins.
    Violation { by: Player, verdict: MoveVerdict, attempted: Ball },
    /// Internal strategy failure by `by`; the opponent wins.
    Resignation { by: Player, reason: String },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    WinI(Certificate),
    WinII(Certificate),
    Undecided { depth: usize, enclosing: Option<Ball> },
}

impl Outcome {
    pub fn winner(&self) -> Option<Player> {
        match self {
            Outcome::WinI(_) => Some(Player::I),
            Outcome::WinII(_) => Some(Player::II),
            Outcome::Undecided { .. } => None,
        }
    }

    pub fn win_for(player: Player, cert: Certificate) -> Outcome {
        match player {
            Player::I => Outcome::WinI(cert),
            Player::II => Outcome::WinII(cert),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceEntry {
    pub turn: usize,
    pub player: Player,
    pub ball: Ball,
    pub verdict: MoveVerdict,
    /// Which cell of a simple strategy fired to produce this move, when known.
    pub cell: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    pub outcome: Option<Outcome>,
}

impl Trace {
    pub fn new() -> Trace {
        Trace::default()
    }

    fn push(&mut self, turn: usize, ball: Ball, verdict: MoveVerdict) {
        self.entries.push(TraceEntry {
            turn,
            player: Player::of_turn(turn),
            ball,
            verdict,
            cell: None,
        });
    }
}

/// Last legal ball of the trace. Any rule-compliant infinite extension's
/// intersection point lies in it.
pub fn enclosing_ball(trace: &Trace) -> Result<Ball, EngineError> {
    trace
        .entries
        .iter()
        .rev()
        .find(|e| e.verdict == MoveVerdict::Legal)
        .map(|e| e.ball.clone())
        .ok_or(EngineError::EmptyTrace)
}

/// Plays strategies against each other for at most `max_moves` single moves.
///
/// After every legal move the target is queried: a ball inside the target
/// settles the run for II, a disjoint ball for I. An illegal move or a
/// strategy failure loses immediately. If the depth runs out, each strategy
/// (II first) may present a limit certificate; a certificate is accepted only
/// if its point lies in the enclosing ball, and is then adjudicated by
/// point_query. Banach-Mazur skips limit certificates: without a radius law
/// the run need not contract to a point.
pub fn play(
    params: &GameParams,
    strat_i: &dyn Strategy,
    strat_ii: &dyn Strategy,
    target: &dyn TargetSet,
    max_moves: usize,
) -> Result<(Trace, Outcome), EngineError> {
    let mut pos = Position::empty();
    let mut trace = Trace::new();
    let mut outcome = None;

    for turn in 0..max_moves {
        let player = Player::of_turn(turn);
        let strat: &dyn Strategy = match player {
            Player::I => strat_i,
            Player::II => strat_ii,
        };
        let ball = match strat.next(&pos) {
            Ok(b) => b,
            Err(e) => {
                outcome = Some(Outcome::win_for(
                    player.opponent(),
                    Certificate::Resignation { by: player, reason: e.reason },
                ));
                break;
            }
        };
        let verdict = match legal_move(params, &pos, &ball) {
            Ok(v) => v,
            Err(e) => {
                outcome = Some(Outcome::win_for(
                    player.opponent(),
                    Certificate::Resignation { by: player, reason: e.to_string() },
                ));
                break;
            }
        };
        trace.push(turn, ball.clone(), verdict);
        if verdict != MoveVerdict::Legal {
            outcome = Some(Outcome::win_for(
                player.opponent(),
                Certificate::Violation { by: player, verdict, attempted: ball },
            ));
            break;
        }
        pos.push_unchecked(ball.clone());
        if target.ball_inside(&ball)? == BallAnswer::Yes {
            outcome = Some(Outcome::WinII(Certificate::BallInside(ball)));
            break;
        }
        if target.ball_disjoint(&ball)? == BallAnswer::Yes {
            outcome = Some(Outcome::WinI(Certificate::BallDisjoint(ball)));
            break;
        }
    }

    let outcome = match outcome {
        Some(o) => o,
        None => adjudicate_limit(params, &pos, strat_i, strat_ii, target)?,
    };
    trace.outcome = Some(outcome.clone());
    Ok((trace, outcome))
}

pub(crate) fn adjudicate_limit(
    params: &GameParams,
    pos: &Position,
    strat_i: &dyn Strategy,
    strat_ii: &dyn Strategy,
    target: &dyn TargetSet,
) -> Result<Outcome, EngineError> {
    let undecided = Outcome::Undecided { depth: pos.turn(), enclosing: pos.last().cloned() };
    if params.variant == Variant::BanachMazur {
        return Ok(undecided);
    }
    let Some(last) = pos.last() else {
        return Ok(undecided);
    };
    for (claimed_by, strat) in [
        (Player::II, strat_ii as &dyn Strategy),
        (Player::I, strat_i as &dyn Strategy),
    ] {
        let Some(point) = strat.limit_certificate(pos) else {
            continue;
        };
        if point.space() != last.space() {
            continue;
        }
        if dist_cmp(&last.center, &point, &last.radius)? == std::cmp::Ordering::Greater {
            // claimed limit escapes the enclosing ball: bogus, ignore
            continue;
        }
        match target.point_query(&point)? {
            Membership::In => {
                return Ok(Outcome::WinII(Certificate::LimitPoint { point, claimed_by }))
            }
            Membership::Out => {
                return Ok(Outcome::WinI(Certificate::LimitPoint { point, claimed_by }))
            }
            Membership::Unknown => continue,
        }
    }
    Ok(undecided)
}
