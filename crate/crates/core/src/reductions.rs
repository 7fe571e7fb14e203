//! Strategy reductions: perturbation slack, simplification of line
//! strategies into finite cell tables, the index-game transform, and the
//! bridge between binary-radius play and integer sequences.
//!
//! Simplification replaces an arbitrary responder with a table of cells and
//! frozen responses. The frozen response for a cell stays legal for every
//! incoming center in the cell because the cell's width never exceeds the
//! response's perturbation slack: if the response ball sits at distance d
//! inside an incoming ball of radius r_prev, any shift of the incoming
//! center by at most (r_prev - r_resp) - d keeps it nested. On the line the
//! cells are rightward half-open intervals emitted by a greedy sweep; in the
//! non-tangent variant they are ball differences disjointified first-fit.
//!
//! The index-game transform replaces real moves by table lookups: the first
//! player supplies a ball together with a one-round table whose responses
//! are absolute, the second names a cell index, and the first player's next
//! ball is forced to be the table's response at that index. A named index is
//! legal only when its cell contains a center that is actually playable;
//! for interval cells on the line this is decided exactly, elsewhere a
//! witness point is required.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use num_traits::One;

use crate::engine::{
    legal_move, scheduled_radius, GameParams, MoveVerdict, Player, Position, Variant,
};
use crate::rat::Rat;
use crate::simple::{
    simple_respond, validate_simple, Atom, Bound, CellIssue, ResponseTemplate, RespondError,
    RoundContext, RoundSource, SimpleOneRound, SimpleStrategy,
};
use crate::space::{dist_exact, Ball, BairePoint, Point, SpaceKind};
use crate::strategy::{Strategy, StrategyError};
use crate::target::{BallAnswer, TargetSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    /// Response failed the legality check with this verdict.
    NotLegal { verdict: MoveVerdict },
    NoPreviousBall,
    /// Euclidean center distance has no exact square root.
    IrrationalDistance,
    WrongVariant(&'static str),
    /// The game leaves radii free, so there is no scheduled probe radius.
    ScheduleFree,
    WrongParity { expected: &'static str },
    EmptyProbe,
    ProbeIllegal { at: Point, verdict: MoveVerdict },
    /// Tangent response during a sweep: no cell can be built here.
    ZeroSlack { witness: Rat },
    /// A cover ball is wider than the slack at its center.
    ProbeExceedsSlack { center: Point, radius: Rat, slack: Rat },
    Strategy(StrategyError),
    Engine(String),
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::NotLegal { verdict } => {
                write!(f, "response is not a legal move: {}", verdict)
            }
            ReduceError::NoPreviousBall => write!(f, "no previous ball to respond to"),
            ReduceError::IrrationalDistance => {
                write!(f, "center distance is irrational; slack is not a rational")
            }
            ReduceError::WrongVariant(need) => write!(f, "operation needs the {} variant", need),
            ReduceError::ScheduleFree => write!(f, "radius schedule is free in this game"),
            ReduceError::WrongParity { expected } => {
                write!(f, "position parity is wrong: expected {} to move", expected)
            }
            ReduceError::EmptyProbe => write!(f, "probe interval is empty"),
            ReduceError::ProbeIllegal { at, verdict } => {
                write!(f, "probe at {} is not a legal incoming move: {}", at, verdict)
            }
            ReduceError::ZeroSlack { witness } => {
                write!(f, "zero slack at probe {}: tangent response", witness)
            }
            ReduceError::ProbeExceedsSlack { center, radius, slack } => write!(
                f,
                "cover ball at {} has radius {} but the slack there is only {}",
                center, radius, slack
            ),
            ReduceError::Strategy(e) => write!(f, "strategy failed: {}", e),
            ReduceError::Engine(msg) => write!(f, "{}", msg),
        }
    }
}

impl std::error::Error for ReduceError {}

impl From<StrategyError> for ReduceError {
    fn from(e: StrategyError) -> ReduceError {
        ReduceError::Strategy(e)
    }
}

/// How far the incoming center could move while the given response stays
/// nested: (r_prev - r_resp) - d(prev center, resp center). Zero exactly on
/// tangent responses. The response must itself be legal at `pos`.
pub fn stability_radius_from_slack(
    params: &GameParams,
    pos: &Position,
    response: &Ball,
) -> Result<Rat, ReduceError> {
    let prev = pos.last().ok_or(ReduceError::NoPreviousBall)?;
    let verdict =
        legal_move(params, pos, response).map_err(|e| ReduceError::Engine(e.to_string()))?;
    if verdict != MoveVerdict::Legal {
        return Err(ReduceError::NotLegal { verdict });
    }
    let d = dist_exact(&prev.center, &response.center)
        .map_err(|e| ReduceError::Engine(e.to_string()))?
        .ok_or(ReduceError::IrrationalDistance)?;
    Ok(&(&prev.radius - &response.radius) - &d)
}

/// Result of a greedy sweep: the emitted table, how far the cursor got, and
/// whether it reached the right end before the cell budget ran out. The
/// issues come from an internal validation pass and are empty for every
/// completed sweep.
#[derive(Debug)]
pub struct SweepOutcome {
    pub oneround: SimpleOneRound,
    pub covered_to: Rat,
    pub complete: bool,
    pub issues: Vec<CellIssue>,
}

fn probe_response(
    strat: &dyn Strategy,
    params: &GameParams,
    prefix: &Position,
    incoming: Ball,
) -> Result<(Ball, Rat), ReduceError> {
    let verdict =
        legal_move(params, prefix, &incoming).map_err(|e| ReduceError::Engine(e.to_string()))?;
    if verdict != MoveVerdict::Legal {
        return Err(ReduceError::ProbeIllegal { at: incoming.center, verdict });
    }
    let mut pos = prefix.clone();
    pos.push_unchecked(incoming);
    let resp = strat.next(&pos)?;
    let slack = stability_radius_from_slack(params, &pos, &resp)?;
    Ok((resp, slack))
}

fn sweep(
    strat: &dyn Strategy,
    params: &GameParams,
    prefix: &Position,
    a: &Rat,
    b: &Rat,
    max_cells: usize,
    inclusive: bool,
) -> Result<SweepOutcome, ReduceError> {
    if prefix.turn() % 2 != 0 {
        return Err(ReduceError::WrongParity { expected: "the incoming mover" });
    }
    if a >= b {
        return Err(ReduceError::EmptyProbe);
    }
    let r_in = scheduled_radius(params, prefix).ok_or(ReduceError::ScheduleFree)?;
    let mut cells = Vec::new();
    let mut cursor = a.clone();
    let keep_going =
        |c: &Rat| if inclusive { c <= b } else { c < b };
    while keep_going(&cursor) && cells.len() < max_cells {
        let incoming = Ball::new(Point::Line(cursor.clone()), r_in.clone());
        let (resp, slack) = probe_response(strat, params, prefix, incoming)?;
        if !slack.is_positive() {
            return Err(ReduceError::ZeroSlack { witness: cursor });
        }
        let end = &cursor + &slack;
        cells.push((
            Atom::Interval { lo: Bound::Closed(cursor), hi: Bound::Open(end.clone()) },
            ResponseTemplate::Absolute(resp),
        ));
        cursor = end;
    }
    let complete = if inclusive { cursor > *b } else { cursor >= *b };
    let oneround = SimpleOneRound { cells };
    let ctx = RoundContext {
        space: SpaceKind::Line,
        incoming_turn: prefix.turn(),
        incoming_radius: r_in,
    };
    let issues = validate_simple(&oneround, params, &ctx);
    Ok(SweepOutcome { oneround, covered_to: cursor, complete, issues })
}

/// Greedy left-to-right simplification of a responder over probe centers
/// [a, b): at cursor z, freeze the response to B(z, scheduled radius) and
/// emit the cell [z, z + slack). Stops once the cursor reaches b, so the
/// cells cover [a, covered_to) with covered_to >= b; a tangent response
/// anywhere aborts with its witness, and running out of cell budget returns
/// a partial cover with `complete: false`.
pub fn simplify_on_line(
    strat: &dyn Strategy,
    params: &GameParams,
    prefix: &Position,
    a: &Rat,
    b: &Rat,
    max_cells: usize,
) -> Result<SweepOutcome, ReduceError> {
    sweep(strat, params, prefix, a, b, max_cells, false)
}

/// The probe center a sweep cell was built from: its closed left end.
fn cell_probe(atom: &Atom) -> Option<Rat> {
    match atom {
        Atom::Interval { lo: Bound::Closed(z), .. } => Some(z.clone()),
        _ => None,
    }
}

/// Position reached by playing `path` through repeated sweeps: each round's
/// incoming ball sits at the probe center of the chosen cell and is answered
/// by that cell's frozen response. Also returns the probe span of the next
/// round. The spans after round zero are the full legal center range around
/// the last response, swept inclusively so both tangent extremes have cells.
pub fn matched_prefix(
    strat: &dyn Strategy,
    params: &GameParams,
    a: &Rat,
    b: &Rat,
    max_cells: usize,
    path: &[usize],
) -> Result<(Position, (Rat, Rat)), ReduceError> {
    let mut prefix = Position::empty();
    let mut span = (a.clone(), b.clone());
    for &idx in path {
        let out = sweep(strat, params, &prefix, &span.0, &span.1, max_cells, true)?;
        let (atom, template) = out
            .oneround
            .cells
            .get(idx)
            .ok_or_else(|| ReduceError::Engine(format!("no cell {} in this round", idx)))?;
        let z = cell_probe(atom).expect("sweep emits closed-open interval cells");
        let r_in = scheduled_radius(params, &prefix).ok_or(ReduceError::ScheduleFree)?;
        prefix.push_unchecked(Ball::new(Point::Line(z), r_in));
        let ResponseTemplate::Absolute(resp) = template else {
            unreachable!("sweep emits absolute responses")
        };
        let resp = resp.clone();
        prefix.push_unchecked(resp.clone());
        let r_next = scheduled_radius(params, &prefix).ok_or(ReduceError::ScheduleFree)?;
        let y = match &resp.center {
            Point::Line(v) => v.clone(),
            _ => unreachable!("line sweep"),
        };
        let s = &resp.radius - &r_next;
        span = (&y - &s, &y + &s);
    }
    Ok((prefix, span))
}

/// One memoized sweep node: the matched run leading here and the cells it
/// swept out. The child span is recomputed from the frozen response, so the
/// node does not keep its own.
struct SweptRound {
    prefix: Position,
    round: SimpleOneRound,
}

/// Lazily swept rounds keyed by index history. Each distinct history is
/// swept once; a child extends its parent's matched run by one probe and
/// one frozen response, so dispatching a t-round position costs t sweeps
/// in total rather than re-deriving every ancestor per round.
struct SweptRounds {
    strat: Rc<dyn Strategy>,
    params: GameParams,
    a: Rat,
    b: Rat,
    max_cells: usize,
    max_rounds: usize,
    memo: RefCell<BTreeMap<Vec<usize>, Rc<SweptRound>>>,
}

impl SweptRounds {
    fn at(&self, path: &[usize]) -> Option<Rc<SweptRound>> {
        if path.len() >= self.max_rounds {
            return None;
        }
        if let Some(hit) = self.memo.borrow().get(path) {
            return Some(hit.clone());
        }
        let (prefix, span) = match path.split_last() {
            None => (Position::empty(), (self.a.clone(), self.b.clone())),
            Some((&idx, parent)) => {
                let up = self.at(parent)?;
                let (atom, template) = up.round.cells.get(idx)?;
                let z = cell_probe(atom).expect("sweep emits closed-open interval cells");
                let r_in = scheduled_radius(&self.params, &up.prefix)?;
                let mut prefix = up.prefix.clone();
                prefix.push_unchecked(Ball::new(Point::Line(z), r_in));
                let ResponseTemplate::Absolute(resp) = template else {
                    unreachable!("sweep emits absolute responses")
                };
                prefix.push_unchecked(resp.clone());
                let r_next = scheduled_radius(&self.params, &prefix)?;
                let Point::Line(y) = &resp.center else { unreachable!("line sweep") };
                let s = &resp.radius - &r_next;
                let span = (y - &s, y + &s);
                (prefix, span)
            }
        };
        let out = sweep(
            self.strat.as_ref(),
            &self.params,
            &prefix,
            &span.0,
            &span.1,
            self.max_cells,
            true,
        )
        .ok()?;
        let entry = Rc::new(SweptRound { prefix, round: out.oneround });
        self.memo.borrow_mut().insert(path.to_vec(), entry.clone());
        Some(entry)
    }
}

/// A full simple strategy for the responder built by sweeping lazily: round
/// zero covers [a, b] and each later round covers the whole legal center
/// range around the previous frozen response. Rounds are memoized per index
/// history. Errors in deeper rounds surface as missing rounds at dispatch
/// time; the round-zero sweep runs eagerly so tangency is caught here.
pub fn simplify_strategy_on_line(
    strat: Rc<dyn Strategy>,
    params: &GameParams,
    a: &Rat,
    b: &Rat,
    max_cells: usize,
    max_rounds: usize,
) -> Result<SimpleStrategy, ReduceError> {
    sweep(strat.as_ref(), params, &Position::empty(), a, b, max_cells, true)?;
    let rounds = SweptRounds {
        strat,
        params: params.clone(),
        a: a.clone(),
        b: b.clone(),
        max_cells,
        max_rounds,
        memo: RefCell::new(BTreeMap::new()),
    };
    let gen = move |path: &[usize]| rounds.at(path).map(|r| r.round.clone());
    Ok(SimpleStrategy::lazy_ii(SpaceKind::Line, gen))
}

/// Non-tangent simplification from an explicit cover: each cover ball must
/// fit inside the slack at its own center, and the cells are the cover balls
/// disjointified first-fit (each minus all earlier ones), answered by the
/// frozen response at the ball's center.
pub fn simplify_non_tangent(
    strat: &dyn Strategy,
    params: &GameParams,
    prefix: &Position,
    cover: &[Ball],
) -> Result<SimpleOneRound, ReduceError> {
    if params.variant != Variant::NonTangentSchmidt {
        return Err(ReduceError::WrongVariant("non-tangent"));
    }
    if prefix.turn() % 2 != 0 {
        return Err(ReduceError::WrongParity { expected: "the incoming mover" });
    }
    let r_in = scheduled_radius(params, prefix).ok_or(ReduceError::ScheduleFree)?;
    let mut cells: Vec<(Atom, ResponseTemplate)> = Vec::new();
    let mut earlier: Vec<(Ball, bool)> = Vec::new();
    for probe in cover {
        let incoming = Ball::new(probe.center.clone(), r_in.clone());
        let (resp, slack) = probe_response(strat, params, prefix, incoming)?;
        if probe.radius > slack {
            return Err(ReduceError::ProbeExceedsSlack {
                center: probe.center.clone(),
                radius: probe.radius.clone(),
                slack,
            });
        }
        cells.push((
            Atom::BallDiff { include: (probe.clone(), false), exclude: earlier.clone() },
            ResponseTemplate::Absolute(resp),
        ));
        earlier.push((probe.clone(), false));
    }
    Ok(SimpleOneRound { cells })
}

/// A move of the index game: the first player plays a ball plus a table of
/// absolute responses, the second names a cell, optionally with a point
/// showing the cell is playable.
#[derive(Clone, Debug)]
pub enum GStarMove {
    Pair { ball: Ball, table: SimpleOneRound },
    Index { n: usize, witness: Option<Point> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GStarViolation {
    WrongKind { turn: usize },
    IllegalBall { turn: usize, verdict: MoveVerdict },
    /// The pair's ball differs from the previous table's response at the
    /// named index.
    ForcedMismatch { turn: usize },
    NonAbsoluteResponse { turn: usize, cell: usize },
    TableInvalid { turn: usize, first_issue: String },
    NoSuchCell { turn: usize, index: usize },
    /// Interval cell proven to contain no playable center.
    EmptyCell { turn: usize, index: usize },
    /// Non-interval cells cannot be tested for emptiness exactly.
    WitnessNeeded { turn: usize, index: usize },
    BadWitness { turn: usize, index: usize, reason: String },
    Engine(String),
}

impl fmt::Display for GStarViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GStarViolation::WrongKind { turn } => {
                write!(f, "turn {}: wrong move kind for this player", turn)
            }
            GStarViolation::IllegalBall { turn, verdict } => {
                write!(f, "turn {}: ball is illegal ({})", turn, verdict)
            }
            GStarViolation::ForcedMismatch { turn } => {
                write!(f, "turn {}: ball must equal the prior table's response", turn)
            }
            GStarViolation::NonAbsoluteResponse { turn, cell } => {
                write!(f, "turn {}: cell {} response is not absolute", turn, cell)
            }
            GStarViolation::TableInvalid { turn, first_issue } => {
                write!(f, "turn {}: table fails validation: {}", turn, first_issue)
            }
            GStarViolation::NoSuchCell { turn, index } => {
                write!(f, "turn {}: table has no cell {}", turn, index)
            }
            GStarViolation::EmptyCell { turn, index } => {
                write!(f, "turn {}: cell {} admits no legal center", turn, index)
            }
            GStarViolation::WitnessNeeded { turn, index } => {
                write!(f, "turn {}: cell {} needs a witness point", turn, index)
            }
            GStarViolation::BadWitness { turn, index, reason } => {
                write!(f, "turn {}: witness for cell {} rejected: {}", turn, index, reason)
            }
            GStarViolation::Engine(msg) => write!(f, "{}", msg),
        }
    }
}

impl std::error::Error for GStarViolation {}

/// State of one index-game run: the moves as played plus the reconstructed
/// real ball history (index moves become witness balls).
#[derive(Debug, Default)]
pub struct GStarState {
    moves: Vec<GStarMove>,
    real: Position,
}

impl GStarState {
    pub fn turn(&self) -> usize {
        self.moves.len()
    }

    pub fn moves(&self) -> &[GStarMove] {
        &self.moves
    }

    pub fn real(&self) -> &Position {
        &self.real
    }
}

/// Rule checker for the index game over a Schmidt base game.
pub struct GStar<'t> {
    pub params: GameParams,
    pub target: &'t dyn TargetSet,
}

pub fn build_gstar<'t>(
    params: GameParams,
    target: &'t dyn TargetSet,
) -> Result<GStar<'t>, ReduceError> {
    if params.variant != Variant::Schmidt {
        return Err(ReduceError::WrongVariant("plain radius-schedule"));
    }
    Ok(GStar { params, target })
}

impl<'t> GStar<'t> {
    pub fn start(&self) -> GStarState {
        GStarState::default()
    }

    fn check_table(
        &self,
        table: &SimpleOneRound,
        ball: &Ball,
        turn: usize,
    ) -> Result<(), GStarViolation> {
        for (i, (_, resp)) in table.cells.iter().enumerate() {
            if !matches!(resp, ResponseTemplate::Absolute(_)) {
                return Err(GStarViolation::NonAbsoluteResponse { turn, cell: i });
            }
        }
        let ctx = RoundContext {
            space: ball.center.space(),
            incoming_turn: turn + 1,
            incoming_radius: &self.params.alpha * &ball.radius,
        };
        let issues = validate_simple(table, &self.params, &ctx);
        if let Some(issue) = issues.first() {
            return Err(GStarViolation::TableInvalid { turn, first_issue: issue.to_string() });
        }
        Ok(())
    }

    fn forced_ball(&self, st: &GStarState) -> Option<Ball> {
        // the table played two moves ago and the index one move ago
        let n = st.moves.len();
        if n < 2 {
            return None;
        }
        let GStarMove::Pair { table, .. } = &st.moves[n - 2] else { return None };
        let GStarMove::Index { n: idx, .. } = &st.moves[n - 1] else { return None };
        let (_, resp) = table.cells.get(*idx)?;
        match resp {
            ResponseTemplate::Absolute(b) => Some(b.clone()),
            ResponseTemplate::CenterRelative { .. } => None,
        }
    }

    /// Find a playable center in an interval cell: the exact intersection of
    /// the cell with the closed legal span around the previous center.
    fn interval_cell_witness(
        &self,
        lo: &Bound,
        hi: &Bound,
        prev: &Ball,
        r_next: &Rat,
    ) -> Option<Rat> {
        let c = match &prev.center {
            Point::Line(v) => v.clone(),
            _ => return None,
        };
        let s = &prev.radius - r_next;
        if s.is_negative() {
            return None;
        }
        crate::simple::interval_overlap(
            lo,
            hi,
            &Bound::Closed(&c - &s),
            &Bound::Closed(&c + &s),
        )
    }

    pub fn push(&self, st: &mut GStarState, mv: GStarMove) -> Result<(), GStarViolation> {
        let turn = st.turn();
        match (&mv, turn % 2) {
            (GStarMove::Pair { ball, table }, 0) => {
                let verdict = legal_move(&self.params, &st.real, ball)
                    .map_err(|e| GStarViolation::Engine(e.to_string()))?;
                if verdict != MoveVerdict::Legal {
                    return Err(GStarViolation::IllegalBall { turn, verdict });
                }
                if turn > 0 {
                    let forced = self
                        .forced_ball(st)
                        .ok_or(GStarViolation::Engine("no forced ball on record".into()))?;
                    if forced != *ball {
                        return Err(GStarViolation::ForcedMismatch { turn });
                    }
                }
                self.check_table(table, ball, turn)?;
                st.real.push_unchecked(ball.clone());
                st.moves.push(mv);
                Ok(())
            }
            (GStarMove::Index { n, witness }, 1) => {
                let GStarMove::Pair { ball: prev, table } = &st.moves[turn - 1] else {
                    return Err(GStarViolation::Engine("pair missing before index".into()));
                };
                let Some((atom, _)) = table.cells.get(*n) else {
                    return Err(GStarViolation::NoSuchCell { turn, index: *n });
                };
                let r_next = &self.params.alpha * &prev.radius;
                let w = match witness {
                    Some(p) => p.clone(),
                    None => match atom {
                        Atom::Interval { lo, hi } => {
                            match self.interval_cell_witness(lo, hi, prev, &r_next) {
                                Some(z) => Point::Line(z),
                                None => {
                                    return Err(GStarViolation::EmptyCell { turn, index: *n })
                                }
                            }
                        }
                        _ => return Err(GStarViolation::WitnessNeeded { turn, index: *n }),
                    },
                };
                let contains = atom
                    .contains(&w)
                    .map_err(|e| GStarViolation::Engine(e.to_string()))?;
                if !contains {
                    return Err(GStarViolation::BadWitness {
                        turn,
                        index: *n,
                        reason: "point is outside the cell".into(),
                    });
                }
                let ball = Ball::new(w, r_next);
                let verdict = legal_move(&self.params, &st.real, &ball)
                    .map_err(|e| GStarViolation::Engine(e.to_string()))?;
                if verdict != MoveVerdict::Legal {
                    return Err(GStarViolation::BadWitness {
                        turn,
                        index: *n,
                        reason: format!("witness move is {}", verdict),
                    });
                }
                st.real.push_unchecked(ball);
                st.moves.push(mv);
                Ok(())
            }
            _ => Err(GStarViolation::WrongKind { turn }),
        }
    }

    /// First ball certificate over the reconstructed real run, if any:
    /// a ball inside the target settles the run for the second player, a
    /// ball missing it entirely settles it for the first.
    pub fn certificate(&self, st: &GStarState) -> Option<(Player, Ball)> {
        for ball in st.real.balls() {
            if matches!(self.target.ball_inside(ball), Ok(BallAnswer::Yes)) {
                return Some((Player::II, ball.clone()));
            }
            if matches!(self.target.ball_disjoint(ball), Ok(BallAnswer::Yes)) {
                return Some((Player::I, ball.clone()));
            }
        }
        None
    }
}

/// A first-player strategy for the index game: the opening ball and a table
/// per index history. The later balls are forced by the tables, so this is
/// all the strategy is.
#[derive(Clone, Debug)]
pub struct SigmaStar {
    pub first: Ball,
    pub tables: RoundSource,
}

fn lookup(src: &RoundSource, key: &[usize]) -> Option<SimpleOneRound> {
    match src {
        RoundSource::Table(t) => t.get(key).cloned(),
        RoundSource::Lazy(f) => f(key),
    }
}

impl SigmaStar {
    /// The table for a given index history, if the strategy carries one.
    pub fn table_at(&self, path: &[usize]) -> Option<SimpleOneRound> {
        lookup(&self.tables, path)
    }
}

/// A ready-made index-game strategy for the first player at alpha = beta =
/// 1/2, rho = 1: open with B(0, 1) and at every history split the opponent's
/// legal span at its center into two cells, answering a quarter radius off
/// center. The responses touch the span ends exactly, which is legal here.
/// Tables exist for histories shorter than `depth`.
pub fn half_split_sigma(depth: usize) -> SigmaStar {
    let gen = move |path: &[usize]| -> Option<SimpleOneRound> {
        if path.len() >= depth {
            return None;
        }
        let mut c = crate::rat::rat(0, 1);
        let mut r = crate::rat::rat(1, 1);
        for &idx in path {
            let q = &r * &crate::rat::rat(1, 4);
            c = if idx == 0 { &c - &q } else { &c + &q };
            r = &r * &crate::rat::rat(1, 4);
        }
        let h = &r * &crate::rat::rat(1, 2);
        let q = &r * &crate::rat::rat(1, 4);
        Some(SimpleOneRound {
            cells: vec![
                (
                    Atom::Interval { lo: Bound::Closed(&c - &h), hi: Bound::Open(c.clone()) },
                    ResponseTemplate::Absolute(Ball::new(Point::Line(&c - &q), q.clone())),
                ),
                (
                    Atom::Interval { lo: Bound::Closed(c.clone()), hi: Bound::Closed(&c + &h) },
                    ResponseTemplate::Absolute(Ball::new(Point::Line(&c + &q), q)),
                ),
            ],
        })
    };
    SigmaStar {
        first: Ball::new(Point::Line(crate::rat::rat(0, 1)), crate::rat::rat(1, 1)),
        tables: RoundSource::Lazy(Rc::new(gen)),
    }
}

/// The real-game strategy induced by an index-game strategy: play the
/// opening ball; map each opponent center to its cell index in the current
/// table and play that cell's absolute response. A center in no cell, an
/// overlap, or a missing table surfaces as a strategy error (the tables are
/// finite and partial by design).
pub struct RealFromGStar {
    sigma: SigmaStar,
}

pub fn gstar_to_real_i(sigma: SigmaStar) -> RealFromGStar {
    RealFromGStar { sigma }
}

impl RealFromGStar {
    /// Replay the opponent balls through the tables: the index of each, and
    /// the forced reply to the last one.
    fn walk(&self, pos: &Position) -> Result<(Vec<usize>, Option<Ball>), StrategyError> {
        if pos.turn() % 2 != 0 {
            return Err(StrategyError::new("index-game strategy moves first"));
        }
        let mut path: Vec<usize> = Vec::new();
        let mut reply = None;
        let opponents: Vec<&Ball> = pos.balls().iter().skip(1).step_by(2).collect();
        for (k, ball) in opponents.iter().enumerate() {
            let table = lookup(&self.sigma.tables, &path).ok_or_else(|| {
                StrategyError::new(format!("no table for index history {:?}", path))
            })?;
            let (resp, idx) = simple_respond(&table, ball).map_err(|e| match e {
                RespondError::NoCell { center } => {
                    StrategyError::new(format!("center {} in no cell", center))
                }
                RespondError::Overlap { first, second, center } => StrategyError::new(format!(
                    "cells {} and {} both contain {}",
                    first, second, center
                )),
                RespondError::Space(s) => StrategyError::new(s.to_string()),
            })?;
            if !matches!(table.cells[idx].1, ResponseTemplate::Absolute(_)) {
                return Err(StrategyError::new("index game needs absolute responses"));
            }
            path.push(idx);
            if k + 1 == opponents.len() {
                reply = Some(resp);
            }
        }
        Ok((path, reply))
    }

    /// The index sequence this position induces, for alignment audits.
    pub fn align(&self, pos: &Position) -> Result<Vec<usize>, StrategyError> {
        Ok(self.walk(pos)?.0)
    }

    pub fn sigma(&self) -> &SigmaStar {
        &self.sigma
    }
}

impl Strategy for RealFromGStar {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        let (_, reply) = self.walk(pos)?;
        Ok(reply.unwrap_or_else(|| self.sigma.first.clone()))
    }
}

/// A cylinder of integer sequences, named by its finite stem.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StemBall {
    pub stem: Vec<i64>,
}

impl fmt::Display for StemBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.stem.is_empty() {
            return write!(f, ".");
        }
        let parts: Vec<String> = self.stem.iter().map(|n| n.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// With the metric 2^(-(n+1)) on first disagreement n, the ball of radius
/// 2^(-k) around x is exactly the set of sequences agreeing with x on the
/// first k-1 coordinates.
pub fn baire_reduce(ball: &Ball) -> Result<StemBall, ReduceError> {
    let Point::Baire(center) = &ball.center else {
        return Err(ReduceError::WrongVariant("integer-sequence space"));
    };
    let r = &ball.radius;
    if !(r.numer().is_one() && r.is_dyadic() && *r < Rat::one()) {
        return Err(ReduceError::Engine(format!(
            "radius {} is not 2^-k with k >= 1",
            r
        )));
    }
    let k = r.denom().bits() - 1;
    let stem = (0..k - 1).map(|i| center.coord(i as usize)).collect();
    Ok(StemBall { stem })
}

pub fn baire_unreduce(stem: &StemBall) -> Ball {
    let k = stem.stem.len() as u32 + 1;
    Ball::new(
        Point::Baire(BairePoint::new(stem.stem.clone(), 0)),
        Rat::pow2_neg(k),
    )
}
