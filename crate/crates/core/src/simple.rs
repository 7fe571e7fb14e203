//! Simple (one-round, cell-based) strategies.
//!
//! A one-round table partitions the possible centers of the opponent's last
//! ball into cells and attaches a response to each: either a fixed ball or a
//! center-relative displacement. A simple strategy is a family of such tables
//! indexed by the sequence of cells the opponent has hit so far.
//!
//! `validate_simple` certifies a table against the rules: cells pairwise
//! disjoint, every response nested in the incoming ball across the whole
//! cell. Sups of center distance are computed exactly (interval and box
//! endpoints, stem disagreement depths); ball-difference cells use a
//! conservative triangle bound and report an honest `Uncertified` when the
//! bound is not conclusive. Tangency is legal exactly when the variant says
//! so: a sup attained at a closed endpoint that equals the slack passes the
//! plain Schmidt check but fails the non-tangent one; a sup only approached
//! at an open endpoint passes both.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::engine::{GameParams, Player, Position, Variant};
use crate::rat::Rat;
use crate::space::{dist_cmp, dist_sq, Ball, BairePoint, Point, SpaceError, SpaceKind};
use crate::strategy::{Strategy, StrategyError};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Bound {
    NegInf,
    Open(Rat),
    Closed(Rat),
    PosInf,
}

impl Bound {
    fn admits_lo(&self, x: &Rat) -> bool {
        match self {
            Bound::NegInf => true,
            Bound::Open(a) => x > a,
            Bound::Closed(a) => x >= a,
            Bound::PosInf => false,
        }
    }

    fn admits_hi(&self, x: &Rat) -> bool {
        match self {
            Bound::PosInf => true,
            Bound::Open(a) => x < a,
            Bound::Closed(a) => x <= a,
            Bound::NegInf => false,
        }
    }

    fn value(&self) -> Option<&Rat> {
        match self {
            Bound::Open(a) | Bound::Closed(a) => Some(a),
            _ => None,
        }
    }
}

/// The tighter of two lower bounds; on equal values open beats closed.
fn lower_max(a: &Bound, b: &Bound) -> Bound {
    match (a, b) {
        (Bound::NegInf, x) | (x, Bound::NegInf) => x.clone(),
        (Bound::PosInf, _) | (_, Bound::PosInf) => Bound::PosInf,
        _ => {
            let (va, vb) = (a.value().unwrap(), b.value().unwrap());
            if va > vb {
                a.clone()
            } else if vb > va {
                b.clone()
            } else if matches!(a, Bound::Open(_)) {
                a.clone()
            } else {
                b.clone()
            }
        }
    }
}

/// The tighter of two upper bounds; on equal values open beats closed.
fn upper_min(a: &Bound, b: &Bound) -> Bound {
    match (a, b) {
        (Bound::PosInf, x) | (x, Bound::PosInf) => x.clone(),
        (Bound::NegInf, _) | (_, Bound::NegInf) => Bound::NegInf,
        _ => {
            let (va, vb) = (a.value().unwrap(), b.value().unwrap());
            if va < vb {
                a.clone()
            } else if vb < va {
                b.clone()
            } else if matches!(a, Bound::Open(_)) {
                a.clone()
            } else {
                b.clone()
            }
        }
    }
}

/// A point of the interval (lo, hi), or None when it is empty. Exact.
pub fn interval_witness(lo: &Bound, hi: &Bound) -> Option<Rat> {
    match (lo, hi) {
        (Bound::PosInf, _) | (_, Bound::NegInf) => None,
        (Bound::NegInf, Bound::PosInf) => Some(Rat::zero()),
        (Bound::NegInf, h) => Some(h.value().unwrap() - &Rat::one()),
        (l, Bound::PosInf) => Some(l.value().unwrap() + &Rat::one()),
        (l, h) => {
            let (a, b) = (l.value().unwrap(), h.value().unwrap());
            if a < b {
                Some((a + b) / Rat::int(2))
            } else if a == b && matches!(l, Bound::Closed(_)) && matches!(h, Bound::Closed(_)) {
                Some(a.clone())
            } else {
                None
            }
        }
    }
}

/// A point common to two intervals, or None when they are disjoint. Exact.
pub fn interval_overlap(lo1: &Bound, hi1: &Bound, lo2: &Bound, hi2: &Bound) -> Option<Rat> {
    interval_witness(&lower_max(lo1, lo2), &upper_min(hi1, hi2))
}

/// A cell: a set of possible centers of the opponent's ball.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Atom {
    /// Line interval.
    Interval { lo: Bound, hi: Bound },
    /// Product of per-axis intervals in Euclidean space.
    Box { axes: Vec<(Bound, Bound)> },
    /// A ball minus finitely many balls; each flag says whether the ball is
    /// taken open.
    BallDiff { include: (Ball, bool), exclude: Vec<(Ball, bool)> },
    /// All Baire points extending the stem.
    Stem(Vec<i64>),
}

impl Atom {
    pub fn space(&self) -> SpaceKind {
        match self {
            Atom::Interval { .. } => SpaceKind::Line,
            Atom::Box { axes } => SpaceKind::Euclid(axes.len()),
            Atom::BallDiff { include, .. } => include.0.space(),
            Atom::Stem(_) => SpaceKind::Baire,
        }
    }

    pub fn contains(&self, p: &Point) -> Result<bool, SpaceError> {
        match (self, p) {
            (Atom::Interval { lo, hi }, Point::Line(x)) => {
                Ok(lo.admits_lo(x) && hi.admits_hi(x))
            }
            (Atom::Box { axes }, Point::Euclid(v)) if axes.len() == v.len() => {
                Ok(axes.iter().zip(v).all(|((lo, hi), x)| lo.admits_lo(x) && hi.admits_hi(x)))
            }
            (Atom::BallDiff { include, exclude }, _) => {
                let in_ball = |(ball, open): &(Ball, bool)| -> Result<bool, SpaceError> {
                    let ord = dist_cmp(&ball.center, p, &ball.radius)?;
                    Ok(if *open {
                        ord == std::cmp::Ordering::Less
                    } else {
                        ord != std::cmp::Ordering::Greater
                    })
                };
                if !in_ball(include)? {
                    return Ok(false);
                }
                for e in exclude {
                    if in_ball(e)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (Atom::Stem(s), Point::Baire(b)) => Ok(s.iter().enumerate().all(|(i, v)| b.coord(i) == *v)),
            _ => Err(SpaceError::MixedSpaces),
        }
    }

    /// Some concrete point of the cell, used to witness uniform violations.
    /// Exact for intervals, boxes, and stems; probes a few candidates for
    /// ball differences and may give up (None).
    pub fn representative(&self) -> Option<Point> {
        match self {
            Atom::Interval { lo, hi } => interval_witness(lo, hi).map(Point::Line),
            Atom::Box { axes } => {
                let mut v = Vec::with_capacity(axes.len());
                for (lo, hi) in axes {
                    v.push(interval_witness(lo, hi)?);
                }
                Some(Point::Euclid(v))
            }
            Atom::BallDiff { include, .. } => {
                let (ball, _) = include;
                let mut probes = vec![ball.center.clone()];
                if let Point::Euclid(c) = &ball.center {
                    for axis in 0..c.len() {
                        for sign in [1i64, -1] {
                            let mut v = c.clone();
                            v[axis] = &v[axis] + &(&ball.radius * &crate::rat::rat(sign, 2));
                            probes.push(Point::Euclid(v));
                        }
                    }
                } else if let Point::Line(c) = &ball.center {
                    for sign in [1i64, -1] {
                        probes.push(Point::Line(c + &(&ball.radius * &crate::rat::rat(sign, 2))));
                    }
                }
                probes.into_iter().find(|p| self.contains(p).unwrap_or(false))
            }
            Atom::Stem(s) => Some(Point::Baire(BairePoint::new(s.clone(), 0))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ResponseTemplate {
    Absolute(Ball),
    /// Center moves by `offset` from the incoming center; on the line the
    /// offset has one component.
    CenterRelative { offset: Vec<Rat>, radius: Rat },
}

impl ResponseTemplate {
    pub fn radius(&self) -> &Rat {
        match self {
            ResponseTemplate::Absolute(b) => &b.radius,
            ResponseTemplate::CenterRelative { radius, .. } => radius,
        }
    }

    pub fn apply(&self, incoming: &Point) -> Result<Ball, SpaceError> {
        match self {
            ResponseTemplate::Absolute(b) => Ok(b.clone()),
            ResponseTemplate::CenterRelative { offset, radius } => {
                let center = incoming.translate(offset)?;
                Ball::try_new(center, radius.clone())
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SimpleOneRound {
    pub cells: Vec<(Atom, ResponseTemplate)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RespondError {
    NoCell { center: Point },
    Overlap { first: usize, second: usize, center: Point },
    Space(SpaceError),
}

impl fmt::Display for RespondError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RespondError::NoCell { center } => write!(f, "no cell contains {}", center),
            RespondError::Overlap { first, second, center } => {
                write!(f, "cells {} and {} both contain {}", first, second, center)
            }
            RespondError::Space(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for RespondError {}

/// Dispatches the incoming ball to the unique cell containing its center.
/// Every cell is tested so an overlap at this center is always detected.
pub fn simple_respond(
    round: &SimpleOneRound,
    incoming: &Ball,
) -> Result<(Ball, usize), RespondError> {
    let mut hit: Option<usize> = None;
    for (i, (atom, _)) in round.cells.iter().enumerate() {
        if atom.contains(&incoming.center).map_err(RespondError::Space)? {
            if let Some(first) = hit {
                return Err(RespondError::Overlap {
                    first,
                    second: i,
                    center: incoming.center.clone(),
                });
            }
            hit = Some(i);
        }
    }
    let i = hit.ok_or_else(|| RespondError::NoCell { center: incoming.center.clone() })?;
    let ball = round.cells[i].1.apply(&incoming.center).map_err(RespondError::Space)?;
    Ok((ball, i))
}

/// What the table is answering: the opponent's ball arrives at `incoming_turn`
/// with `incoming_radius`, so the response is move `incoming_turn + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RoundContext {
    pub space: SpaceKind,
    pub incoming_turn: usize,
    pub incoming_radius: Rat,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CellIssue {
    pub cell: usize,
    pub kind: IssueKind,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IssueKind {
    /// Response radius breaks the radius rule.
    WrongRadius { got: Rat, want: Rat },
    SpaceMismatch,
    /// The response is not nested in the incoming ball at this center.
    Escape { witness: Point },
    /// The response is tangent at this center; illegal in the non-tangent
    /// variant only.
    TangentAttained { witness: Point },
    /// Soundness could not be decided by the conservative bound in use.
    Uncertified { reason: String },
    Overlap { other: usize, witness: Point },
    /// Disjointness from `other` could not be certified.
    PotentialOverlap { other: usize },
}

impl fmt::Display for CellIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cell {}: ", self.cell)?;
        match &self.kind {
            IssueKind::WrongRadius { got, want } => write!(f, "radius {} (rule wants {})", got, want),
            IssueKind::SpaceMismatch => write!(f, "space mismatch"),
            IssueKind::Escape { witness } => write!(f, "response escapes at {}", witness),
            IssueKind::TangentAttained { witness } => write!(f, "tangent attained at {}", witness),
            IssueKind::Uncertified { reason } => write!(f, "uncertified: {}", reason),
            IssueKind::Overlap { other, witness } => {
                write!(f, "overlaps cell {} at {}", other, witness)
            }
            IssueKind::PotentialOverlap { other } => {
                write!(f, "disjointness from cell {} not certified", other)
            }
        }
    }
}

/// Farthest distance from `c` over the interval, with attainment: the
/// maximizing endpoint and whether the cell contains it. None when the
/// interval is unbounded on the far side.
fn interval_sup(lo: &Bound, hi: &Bound, c: &Rat) -> Option<(Rat, bool, Rat)> {
    // candidates (distance, attained, endpoint value)
    let mut best: Option<(Rat, bool, Rat)> = None;
    let cands = [
        (lo, matches!(lo, Bound::Closed(_))),
        (hi, matches!(hi, Bound::Closed(_))),
    ];
    for (b, attained) in cands {
        match b {
            Bound::NegInf | Bound::PosInf => return None,
            Bound::Open(v) | Bound::Closed(v) => {
                let d = (v - c).abs();
                let better = match &best {
                    None => true,
                    Some((bd, batt, _)) => d > *bd || (d == *bd && attained && !batt),
                };
                if better {
                    best = Some((d, attained, v.clone()));
                }
            }
        }
    }
    best
}

/// A strictly interior point of the nonempty interval near `endpoint` whose
/// distance from `c` exceeds `slack`; exists because the sup does.
fn interior_escape_line(lo: &Bound, hi: &Bound, c: &Rat, slack: &Rat, endpoint: &Rat) -> Rat {
    let toward = interval_witness(lo, hi).expect("cell nonempty");
    let mut x = (&toward + endpoint) / Rat::int(2);
    loop {
        if lo.admits_lo(&x) && hi.admits_hi(&x) && (&x - c).abs() > *slack {
            return x;
        }
        x = (&x + endpoint) / Rat::int(2);
    }
}

fn check_radius(params: &GameParams, ctx: &RoundContext, got: &Rat) -> Option<IssueKind> {
    match params.variant {
        Variant::Schmidt | Variant::NonTangentSchmidt => {
            let want = params.shrink_factor(ctx.incoming_turn + 1) * &ctx.incoming_radius;
            if *got != want {
                return Some(IssueKind::WrongRadius { got: got.clone(), want });
            }
        }
        Variant::BanachMazur => {
            if !got.is_positive() || *got > ctx.incoming_radius {
                return Some(IssueKind::WrongRadius {
                    got: got.clone(),
                    want: ctx.incoming_radius.clone(),
                });
            }
        }
    }
    None
}

/// d == slack exactly: tangent. Legal unless the variant forbids tangency.
fn tangent_issue(params: &GameParams, witness: Point) -> Option<IssueKind> {
    if params.variant == Variant::NonTangentSchmidt {
        Some(IssueKind::TangentAttained { witness })
    } else {
        None
    }
}

fn check_cell_containment(
    params: &GameParams,
    ctx: &RoundContext,
    atom: &Atom,
    resp: &ResponseTemplate,
) -> Option<IssueKind> {
    let slack = &ctx.incoming_radius - resp.radius();
    debug_assert!(!slack.is_negative());

    if let ResponseTemplate::CenterRelative { offset, radius: _ } = resp {
        // uniform displacement: d is the same at every center
        if ctx.space == SpaceKind::Baire {
            return Some(IssueKind::Uncertified {
                reason: "center-relative response is not defined on sequence space".into(),
            });
        }
        let norm_sq: Rat = offset.iter().map(|o| o.square()).sum();
        let slack_sq = slack.square();
        return if norm_sq > slack_sq {
            match atom.representative() {
                Some(witness) => Some(IssueKind::Escape { witness }),
                None => Some(IssueKind::Uncertified {
                    reason: "offset exceeds slack but no cell point was located".into(),
                }),
            }
        } else if norm_sq == slack_sq && !slack.is_zero() {
            match atom.representative() {
                Some(witness) => tangent_issue(params, witness),
                None => None,
            }
        } else {
            None
        };
    }

    let ResponseTemplate::Absolute(ball) = resp else { unreachable!() };
    match atom {
        Atom::Interval { lo, hi } => {
            if interval_witness(lo, hi).is_none() {
                return None; // empty cell: vacuously sound
            }
            let Point::Line(c) = &ball.center else {
                return Some(IssueKind::SpaceMismatch);
            };
            match interval_sup(lo, hi, c) {
                None => {
                    // unbounded cell, fixed response: centers far out escape
                    let far = c + &(&slack + &Rat::one());
                    let witness = if hi == &Bound::PosInf {
                        let mut x = far;
                        if let Some(v) = lo.value() {
                            x = x.max(v + &Rat::one());
                        }
                        x
                    } else {
                        let mut x = c - &(&slack + &Rat::one());
                        if let Some(v) = hi.value() {
                            x = x.min(v - &Rat::one());
                        }
                        x
                    };
                    Some(IssueKind::Escape { witness: Point::Line(witness) })
                }
                Some((d, attained, at)) => {
                    if d > slack {
                        let witness = if attained {
                            Point::Line(at)
                        } else {
                            Point::Line(interior_escape_line(lo, hi, c, &slack, &at))
                        };
                        Some(IssueKind::Escape { witness })
                    } else if d == slack && attained {
                        tangent_issue(params, Point::Line(at))
                    } else {
                        None
                    }
                }
            }
        }
        Atom::Box { axes } => {
            let Point::Euclid(c) = &ball.center else {
                return Some(IssueKind::SpaceMismatch);
            };
            if c.len() != axes.len() {
                return Some(IssueKind::SpaceMismatch);
            }
            let mut reps = Vec::with_capacity(axes.len());
            for (lo, hi) in axes {
                match interval_witness(lo, hi) {
                    Some(w) => reps.push(w),
                    None => return None, // empty cell
                }
            }
            // farthest per-axis endpoint; an unbounded axis escapes outright
            let mut corner = Vec::with_capacity(axes.len());
            let mut attained_all = true;
            for (i, (lo, hi)) in axes.iter().enumerate() {
                match interval_sup(lo, hi, &c[i]) {
                    None => {
                        let mut v = reps.clone();
                        let far = &c[i] + &(&slack + &Rat::one());
                        v[i] = if hi == &Bound::PosInf {
                            let mut x = far;
                            if let Some(b) = lo.value() {
                                x = x.max(b + &Rat::one());
                            }
                            x
                        } else {
                            let mut x = &c[i] - &(&slack + &Rat::one());
                            if let Some(b) = hi.value() {
                                x = x.min(b - &Rat::one());
                            }
                            x
                        };
                        return Some(IssueKind::Escape { witness: Point::Euclid(v) });
                    }
                    Some((_, att, at)) => {
                        attained_all &= att;
                        corner.push(at);
                    }
                }
            }
            let sup_sq: Rat = corner.iter().zip(c).map(|(x, ci)| (x - ci).square()).sum();
            let slack_sq = slack.square();
            if sup_sq > slack_sq {
                if attained_all {
                    return Some(IssueKind::Escape { witness: Point::Euclid(corner) });
                }
                // nudge open-endpoint axes inward until the point is both in
                // the cell and beyond the slack; converges to the corner
                let mut shift = Rat::one() / Rat::int(2);
                loop {
                    let v: Vec<Rat> = corner
                        .iter()
                        .zip(axes)
                        .zip(&reps)
                        .map(|((x, (lo, hi)), rep)| {
                            if lo.admits_lo(x) && hi.admits_hi(x) {
                                x.clone()
                            } else {
                                x + &(&shift * &(rep - x))
                            }
                        })
                        .collect();
                    let p = Point::Euclid(v);
                    let inside = Atom::Box { axes: axes.clone() }.contains(&p).unwrap_or(false);
                    if inside && dist_sq(&p, &ball.center).unwrap() > slack_sq {
                        return Some(IssueKind::Escape { witness: p });
                    }
                    shift = &shift / &Rat::int(2);
                }
            }
            if sup_sq == slack_sq && attained_all && !slack.is_zero() {
                return tangent_issue(params, Point::Euclid(corner));
            }
            None
        }
        Atom::Stem(s) => {
            let Point::Baire(c) = &ball.center else {
                return Some(IssueKind::SpaceMismatch);
            };
            // sup distance over extensions of the stem: first disagreement of
            // the response center with the stem, or the stem length if it
            // conforms; always attained
            let m = s.len();
            let disagree = s.iter().enumerate().find(|(i, v)| c.coord(*i) != **v).map(|(i, _)| i);
            let j = disagree.unwrap_or(m);
            let sup = Rat::pow2_neg(j as u32 + 1);
            let witness = || {
                let p = match disagree {
                    Some(_) => BairePoint::new(s.clone(), 0),
                    None => {
                        let mut ext = s.clone();
                        ext.push(c.coord(m) + 1);
                        BairePoint::new(ext, 0)
                    }
                };
                Point::Baire(p)
            };
            if sup > slack {
                Some(IssueKind::Escape { witness: witness() })
            } else if sup == slack {
                tangent_issue(params, witness())
            } else {
                None
            }
        }
        Atom::BallDiff { include, .. } => {
            let (inc, _) = include;
            if inc.space() != ball.space() {
                return Some(IssueKind::SpaceMismatch);
            }
            // triangle bound: d(x, resp) <= d(inc, resp) + r_inc for x in the
            // included ball; certify when the bound already fits the slack
            let margin = &slack - &inc.radius;
            match dist_cmp(&inc.center, &ball.center, &margin) {
                Err(e) => Some(IssueKind::Uncertified { reason: e.to_string() }),
                Ok(std::cmp::Ordering::Less) => None,
                Ok(std::cmp::Ordering::Equal) => {
                    if params.variant == Variant::NonTangentSchmidt {
                        Some(IssueKind::Uncertified {
                            reason: "triangle bound attains the slack; tangency not excluded"
                                .into(),
                        })
                    } else {
                        None
                    }
                }
                Ok(std::cmp::Ordering::Greater) => Some(IssueKind::Uncertified {
                    reason: "triangle bound exceeds the slack".into(),
                }),
            }
        }
    }
}

/// Balls provably share no point (flags mark open balls). Sufficient exact
/// conditions; false means "not certified" rather than "they meet".
fn balls_certified_disjoint(a: &(Ball, bool), b: &(Ball, bool)) -> bool {
    let gap = &a.0.radius + &b.0.radius;
    match dist_cmp(&a.0.center, &b.0.center, &gap) {
        Ok(std::cmp::Ordering::Greater) => true,
        Ok(std::cmp::Ordering::Equal) => a.1 || b.1,
        _ => false,
    }
}

/// `inner` ball provably contained in `outer` ball, respecting open flags.
fn ball_certified_inside(inner: &(Ball, bool), outer: &(Ball, bool)) -> bool {
    let margin = &outer.0.radius - &inner.0.radius;
    match dist_cmp(&inner.0.center, &outer.0.center, &margin) {
        Ok(std::cmp::Ordering::Less) => true,
        // internal tangency fails only for a closed inner in an open outer
        Ok(std::cmp::Ordering::Equal) => !(!inner.1 && outer.1),
        _ => false,
    }
}

fn check_disjoint(i: usize, a: &Atom, j: usize, b: &Atom) -> Option<CellIssue> {
    let overlap = |witness: Point| {
        Some(CellIssue { cell: i, kind: IssueKind::Overlap { other: j, witness } })
    };
    let potential =
        || Some(CellIssue { cell: i, kind: IssueKind::PotentialOverlap { other: j } });
    match (a, b) {
        (Atom::Interval { lo: l1, hi: h1 }, Atom::Interval { lo: l2, hi: h2 }) => {
            interval_overlap(l1, h1, l2, h2).map(Point::Line).and_then(overlap)
        }
        (Atom::Box { axes: x }, Atom::Box { axes: y }) if x.len() == y.len() => {
            let mut witness = Vec::with_capacity(x.len());
            for ((l1, h1), (l2, h2)) in x.iter().zip(y) {
                match interval_overlap(l1, h1, l2, h2) {
                    Some(w) => witness.push(w),
                    None => return None,
                }
            }
            overlap(Point::Euclid(witness))
        }
        (Atom::Stem(s), Atom::Stem(t)) => {
            let n = s.len().min(t.len());
            if s[..n] == t[..n] {
                let longer = if s.len() >= t.len() { s } else { t };
                overlap(Point::Baire(BairePoint::new(longer.clone(), 0)))
            } else {
                None
            }
        }
        (Atom::BallDiff { include: ia, exclude: ea }, Atom::BallDiff { include: ib, exclude: eb }) => {
            if balls_certified_disjoint(ia, ib) {
                return None;
            }
            // one cell's included ball swallowed by an exclusion of the other
            if eb.iter().any(|e| ball_certified_inside(ia, e))
                || ea.iter().any(|e| ball_certified_inside(ib, e))
            {
                return None;
            }
            potential()
        }
        _ => potential(),
    }
}

/// Certifies a one-round table: space agreement, radius rule, response
/// containment over every cell, pairwise disjointness. Empty issue list
/// means certified.
pub fn validate_simple(
    round: &SimpleOneRound,
    params: &GameParams,
    ctx: &RoundContext,
) -> Vec<CellIssue> {
    let mut issues = Vec::new();
    for (i, (atom, resp)) in round.cells.iter().enumerate() {
        if atom.space() != ctx.space {
            issues.push(CellIssue { cell: i, kind: IssueKind::SpaceMismatch });
            continue;
        }
        if let ResponseTemplate::Absolute(b) = resp {
            if b.space() != ctx.space {
                issues.push(CellIssue { cell: i, kind: IssueKind::SpaceMismatch });
                continue;
            }
        }
        if let ResponseTemplate::CenterRelative { offset, .. } = resp {
            let want = match ctx.space {
                SpaceKind::Line => 1,
                SpaceKind::Euclid(n) => n,
                SpaceKind::Baire => 0,
            };
            if want == 0 || offset.len() != want {
                issues.push(CellIssue { cell: i, kind: IssueKind::SpaceMismatch });
                continue;
            }
        }
        if let Some(kind) = check_radius(params, ctx, resp.radius()) {
            issues.push(CellIssue { cell: i, kind });
            continue;
        }
        if let Some(kind) = check_cell_containment(params, ctx, atom, resp) {
            issues.push(CellIssue { cell: i, kind });
        }
    }
    for i in 0..round.cells.len() {
        for j in (i + 1)..round.cells.len() {
            let (a, b) = (&round.cells[i].0, &round.cells[j].0);
            if a.space() != b.space() {
                continue; // already flagged as a space mismatch above
            }
            if let Some(issue) = check_disjoint(i, a, j, b) {
                issues.push(issue);
            }
        }
    }
    issues
}

/// Rounds indexed by the opponent's cell path so far.
#[derive(Clone)]
pub enum RoundSource {
    Table(BTreeMap<Vec<usize>, SimpleOneRound>),
    Lazy(Rc<dyn Fn(&[usize]) -> Option<SimpleOneRound>>),
}

impl fmt::Debug for RoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoundSource::Table(t) => f.debug_tuple("Table").field(t).finish(),
            RoundSource::Lazy(_) => f.write_str("Lazy(..)"),
        }
    }
}

/// A full simple strategy: responses depend only on the round index and the
/// cell the opponent's last center fell in. Player I additionally owns a
/// fixed first move.
#[derive(Clone, Debug)]
pub struct SimpleStrategy {
    pub player: Player,
    pub space: SpaceKind,
    pub first: Option<Ball>,
    pub rounds: RoundSource,
}

impl SimpleStrategy {
    pub fn for_ii(space: SpaceKind, rounds: BTreeMap<Vec<usize>, SimpleOneRound>) -> SimpleStrategy {
        SimpleStrategy {
            player: Player::II,
            space,
            first: None,
            rounds: RoundSource::Table(rounds),
        }
    }

    pub fn for_i(
        space: SpaceKind,
        first: Ball,
        rounds: BTreeMap<Vec<usize>, SimpleOneRound>,
    ) -> SimpleStrategy {
        SimpleStrategy {
            player: Player::I,
            space,
            first: Some(first),
            rounds: RoundSource::Table(rounds),
        }
    }

    pub fn lazy_ii(
        space: SpaceKind,
        gen: impl Fn(&[usize]) -> Option<SimpleOneRound> + 'static,
    ) -> SimpleStrategy {
        SimpleStrategy {
            player: Player::II,
            space,
            first: None,
            rounds: RoundSource::Lazy(Rc::new(gen)),
        }
    }

    pub fn round(&self, key: &[usize]) -> Option<SimpleOneRound> {
        match &self.rounds {
            RoundSource::Table(t) => t.get(key).cloned(),
            RoundSource::Lazy(f) => f(key),
        }
    }

    /// Opponent balls this strategy answers, in order, from a position where
    /// it is to move.
    fn opponent_balls<'p>(&self, pos: &'p Position) -> Vec<&'p Ball> {
        let skip = match self.player {
            Player::I => 1, // II's balls sit at odd indices
            Player::II => 0,
        };
        pos.balls().iter().skip(skip).step_by(2).collect()
    }

    /// Replays the position, classifying each opponent ball into its cell,
    /// and answers the last one. Also returns the cell index it fell in
    /// (None for player I's fixed first move) and the full cell path.
    pub fn respond_in(
        &self,
        pos: &Position,
    ) -> Result<(Ball, Option<usize>, Vec<usize>), StrategyError> {
        if self.player == Player::I && pos.last().is_none() {
            return self
                .first
                .clone()
                .map(|b| (b, None, Vec::new()))
                .ok_or_else(|| StrategyError::new("player-I table without a first move"));
        }
        let opponent = self.opponent_balls(pos);
        if opponent.is_empty() {
            return Err(StrategyError::new("no opponent ball to answer"));
        }
        let mut path: Vec<usize> = Vec::new();
        let mut answer: Option<(Ball, usize)> = None;
        for (k, ball) in opponent.iter().enumerate() {
            let round = self
                .round(&path)
                .ok_or_else(|| StrategyError::new(format!("no round for path {:?}", path)))?;
            let (resp, cell) =
                simple_respond(&round, ball).map_err(|e| StrategyError::new(e.to_string()))?;
            path.push(cell);
            if k + 1 == opponent.len() {
                answer = Some((resp, cell));
            }
        }
        let (ball, cell) = answer.expect("nonempty opponent list");
        Ok((ball, Some(cell), path))
    }

    /// Materializes lazy rounds for the given keys into a plain table.
    pub fn materialize(&self, keys: &[Vec<usize>]) -> SimpleStrategy {
        let mut table = BTreeMap::new();
        for k in keys {
            if let Some(r) = self.round(k) {
                table.insert(k.clone(), r);
            }
        }
        SimpleStrategy {
            player: self.player,
            space: self.space.clone(),
            first: self.first.clone(),
            rounds: RoundSource::Table(table),
        }
    }
}

impl Strategy for SimpleStrategy {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        self.respond_in(pos).map(|(b, _, _)| b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleDocError {
    pub line: usize,
    pub msg: String,
}

impl SimpleDocError {
    fn at(line: usize, msg: impl Into<String>) -> SimpleDocError {
        SimpleDocError { line, msg: msg.into() }
    }
}

impl fmt::Display for SimpleDocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strategy doc line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for SimpleDocError {}

fn emit_bound_pair(lo: &Bound, hi: &Bound) -> String {
    let l = match lo {
        Bound::NegInf => "(-inf".to_string(),
        Bound::Open(a) => format!("({}", a),
        Bound::Closed(a) => format!("[{}", a),
        Bound::PosInf => "(inf".to_string(),
    };
    let h = match hi {
        Bound::PosInf => "inf)".to_string(),
        Bound::Open(a) => format!("{})", a),
        Bound::Closed(a) => format!("{}]", a),
        Bound::NegInf => "-inf)".to_string(),
    };
    format!("{},{}", l, h)
}

fn parse_bound_pair(s: &str, line: usize) -> Result<(Bound, Bound), SimpleDocError> {
    let bad = || SimpleDocError::at(line, format!("bad interval {:?}", s));
    let mut chars = s.chars();
    let open_lo = match chars.next() {
        Some('[') => false,
        Some('(') => true,
        _ => return Err(bad()),
    };
    let open_hi = match s.chars().last() {
        Some(']') => false,
        Some(')') => true,
        _ => return Err(bad()),
    };
    let inner = &s[1..s.len() - 1];
    let (ls, hs) = inner.split_once(',').ok_or_else(bad)?;
    let lo = match ls {
        "-inf" if open_lo => Bound::NegInf,
        _ => {
            let v = Rat::from_str(ls).map_err(|_| bad())?;
            if open_lo {
                Bound::Open(v)
            } else {
                Bound::Closed(v)
            }
        }
    };
    let hi = match hs {
        "inf" if open_hi => Bound::PosInf,
        _ => {
            let v = Rat::from_str(hs).map_err(|_| bad())?;
            if open_hi {
                Bound::Open(v)
            } else {
                Bound::Closed(v)
            }
        }
    };
    Ok((lo, hi))
}

fn emit_flagged_ball(ball: &Ball, open: bool) -> String {
    format!("{} {} {}", ball.center, ball.radius, if open { "open" } else { "closed" })
}

fn emit_atom(atom: &Atom) -> String {
    match atom {
        Atom::Interval { lo, hi } => format!("interval {}", emit_bound_pair(lo, hi)),
        Atom::Box { axes } => {
            let parts: Vec<String> = axes.iter().map(|(l, h)| emit_bound_pair(l, h)).collect();
            format!("box {}", parts.join("x"))
        }
        Atom::BallDiff { include, exclude } => {
            let mut s = format!("bdiff {}", emit_flagged_ball(&include.0, include.1));
            for (b, open) in exclude {
                s.push_str(&format!(" minus {}", emit_flagged_ball(b, *open)));
            }
            s
        }
        Atom::Stem(s) => {
            if s.is_empty() {
                "stem .".to_string()
            } else {
                let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
                format!("stem {}", parts.join(","))
            }
        }
    }
}

fn parse_flagged_ball(fields: &[&str], line: usize) -> Result<(Ball, bool), SimpleDocError> {
    let bad = || SimpleDocError::at(line, "expected <center> <radius> open|closed");
    let [center, radius, flag] = fields else {
        return Err(bad());
    };
    let c = Point::from_str(center).map_err(|e| SimpleDocError::at(line, e.to_string()))?;
    let r = Rat::from_str(radius).map_err(|e| SimpleDocError::at(line, e.to_string()))?;
    let ball = Ball::try_new(c, r).map_err(|e| SimpleDocError::at(line, e.to_string()))?;
    let open = match *flag {
        "open" => true,
        "closed" => false,
        _ => return Err(bad()),
    };
    Ok((ball, open))
}

fn parse_atom(s: &str, line: usize) -> Result<Atom, SimpleDocError> {
    let s = s.trim();
    let (kind, rest) = s.split_once(' ').unwrap_or((s, ""));
    match kind {
        "interval" => {
            let (lo, hi) = parse_bound_pair(rest.trim(), line)?;
            Ok(Atom::Interval { lo, hi })
        }
        "box" => {
            let mut axes = Vec::new();
            for part in rest.trim().split('x') {
                axes.push(parse_bound_pair(part, line)?);
            }
            if axes.len() < 2 {
                return Err(SimpleDocError::at(line, "box needs at least two axes"));
            }
            Ok(Atom::Box { axes })
        }
        "bdiff" => {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let mut groups = fields.split(|f| *f == "minus");
            let include = parse_flagged_ball(
                groups.next().ok_or_else(|| SimpleDocError::at(line, "bdiff needs a ball"))?,
                line,
            )?;
            let mut exclude = Vec::new();
            for g in groups {
                exclude.push(parse_flagged_ball(g, line)?);
            }
            Ok(Atom::BallDiff { include, exclude })
        }
        "stem" => {
            let body = rest.trim();
            if body == "." {
                return Ok(Atom::Stem(Vec::new()));
            }
            let mut stem = Vec::new();
            for part in body.split(',') {
                stem.push(
                    part.parse::<i64>()
                        .map_err(|_| SimpleDocError::at(line, format!("bad stem entry {:?}", part)))?,
                );
            }
            Ok(Atom::Stem(stem))
        }
        _ => Err(SimpleDocError::at(line, format!("unknown cell kind {:?}", kind))),
    }
}

fn emit_response(resp: &ResponseTemplate) -> String {
    match resp {
        ResponseTemplate::Absolute(b) => format!("abs {} {}", b.center, b.radius),
        ResponseTemplate::CenterRelative { offset, radius } => {
            let parts: Vec<String> = offset.iter().map(|o| o.to_string()).collect();
            format!("rel [{}] {}", parts.join(","), radius)
        }
    }
}

fn parse_response(s: &str, line: usize) -> Result<ResponseTemplate, SimpleDocError> {
    let fields: Vec<&str> = s.split_whitespace().collect();
    match fields.as_slice() {
        ["abs", center, radius] => {
            let c = Point::from_str(center).map_err(|e| SimpleDocError::at(line, e.to_string()))?;
            let r = Rat::from_str(radius).map_err(|e| SimpleDocError::at(line, e.to_string()))?;
            let b = Ball::try_new(c, r).map_err(|e| SimpleDocError::at(line, e.to_string()))?;
            Ok(ResponseTemplate::Absolute(b))
        }
        ["rel", offset, radius] => {
            let inner = offset
                .strip_prefix('[')
                .and_then(|o| o.strip_suffix(']'))
                .ok_or_else(|| SimpleDocError::at(line, "rel offset must be [a,b,...]"))?;
            let mut v = Vec::new();
            for part in inner.split(',') {
                v.push(Rat::from_str(part).map_err(|e| SimpleDocError::at(line, e.to_string()))?);
            }
            let r = Rat::from_str(radius).map_err(|e| SimpleDocError::at(line, e.to_string()))?;
            if !r.is_positive() {
                return Err(SimpleDocError::at(line, "response radius must be positive"));
            }
            Ok(ResponseTemplate::CenterRelative { offset: v, radius: r })
        }
        _ => Err(SimpleDocError::at(line, format!("bad response {:?}", s))),
    }
}

fn round_key_text(key: &[usize]) -> String {
    if key.is_empty() {
        ".".to_string()
    } else {
        key.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Serializes a table-backed simple strategy. Lazy rounds must be
/// materialized first.
pub fn emit_simple(s: &SimpleStrategy) -> Result<String, StrategyError> {
    let RoundSource::Table(table) = &s.rounds else {
        return Err(StrategyError::new("materialize lazy rounds before serializing"));
    };
    let mut out = format!("simple-strategy v1\nplayer {}\nspace {}\n", s.player, s.space);
    if let Some(first) = &s.first {
        out.push_str(&format!("first {} {}\n", first.center, first.radius));
    }
    for (key, round) in table {
        out.push_str(&format!("round {}\n", round_key_text(key)));
        for (atom, resp) in &round.cells {
            out.push_str(&format!("cell {} -> {}\n", emit_atom(atom), emit_response(resp)));
        }
        out.push_str("end\n");
    }
    Ok(out)
}

pub fn parse_simple(text: &str) -> Result<SimpleStrategy, SimpleDocError> {
    let mut player: Option<Player> = None;
    let mut space: Option<SpaceKind> = None;
    let mut first: Option<Ball> = None;
    let mut table: BTreeMap<Vec<usize>, SimpleOneRound> = BTreeMap::new();
    let mut current: Option<(Vec<usize>, SimpleOneRound)> = None;
    let mut seen_header = false;

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !seen_header {
            if line != "simple-strategy v1" {
                return Err(SimpleDocError::at(n, "expected header \"simple-strategy v1\""));
            }
            seen_header = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("player ") {
            player = Some(match rest.trim() {
                "I" => Player::I,
                "II" => Player::II,
                other => return Err(SimpleDocError::at(n, format!("bad player {:?}", other))),
            });
        } else if let Some(rest) = line.strip_prefix("space ") {
            space = Some(
                crate::target::parse_space(rest.trim())
                    .map_err(|e| SimpleDocError::at(n, e.to_string()))?,
            );
        } else if let Some(rest) = line.strip_prefix("first ") {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let [center, radius] = fields.as_slice() else {
                return Err(SimpleDocError::at(n, "first takes <center> <radius>"));
            };
            let c =
                Point::from_str(center).map_err(|e| SimpleDocError::at(n, e.to_string()))?;
            let r = Rat::from_str(radius).map_err(|e| SimpleDocError::at(n, e.to_string()))?;
            first = Some(Ball::try_new(c, r).map_err(|e| SimpleDocError::at(n, e.to_string()))?);
        } else if let Some(rest) = line.strip_prefix("round ") {
            if current.is_some() {
                return Err(SimpleDocError::at(n, "previous round not closed with end"));
            }
            let key_text = rest.trim();
            let key = if key_text == "." {
                Vec::new()
            } else {
                let mut k = Vec::new();
                for part in key_text.split(',') {
                    k.push(part.parse::<usize>().map_err(|_| {
                        SimpleDocError::at(n, format!("bad round key {:?}", key_text))
                    })?);
                }
                k
            };
            if table.contains_key(&key) {
                return Err(SimpleDocError::at(n, format!("duplicate round {:?}", key_text)));
            }
            current = Some((key, SimpleOneRound::default()));
        } else if let Some(rest) = line.strip_prefix("cell ") {
            let Some((_, round)) = current.as_mut() else {
                return Err(SimpleDocError::at(n, "cell outside a round block"));
            };
            let (atom_text, resp_text) = rest
                .split_once("->")
                .ok_or_else(|| SimpleDocError::at(n, "cell needs \"<atom> -> <response>\""))?;
            let atom = parse_atom(atom_text, n)?;
            let resp = parse_response(resp_text.trim(), n)?;
            round.cells.push((atom, resp));
        } else if line == "end" {
            let Some((key, round)) = current.take() else {
                return Err(SimpleDocError::at(n, "end outside a round block"));
            };
            table.insert(key, round);
        } else {
            return Err(SimpleDocError::at(n, format!("unrecognized line {:?}", raw.trim())));
        }
    }
    if current.is_some() {
        return Err(SimpleDocError::at(text.lines().count(), "unclosed round block"));
    }
    let player = player.ok_or_else(|| SimpleDocError::at(1, "missing player line"))?;
    let space = space.ok_or_else(|| SimpleDocError::at(1, "missing space line"))?;
    if player == Player::I && first.is_none() {
        return Err(SimpleDocError::at(1, "player-I strategy needs a first line"));
    }
    Ok(SimpleStrategy { player, space, first, rounds: RoundSource::Table(table) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn lball(c: (i64, i64), r: (i64, i64)) -> Ball {
        Ball::new(Point::Line(rat(c.0, c.1)), rat(r.0, r.1))
    }

    fn iv(lo: Bound, hi: Bound) -> Atom {
        Atom::Interval { lo, hi }
    }

    fn schmidt_half() -> GameParams {
        GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 1))).unwrap()
    }

    fn nt_half() -> GameParams {
        GameParams::non_tangent(rat(1, 2), rat(1, 2), Some(rat(1, 1))).unwrap()
    }

    fn line_ctx() -> RoundContext {
        RoundContext {
            space: SpaceKind::Line,
            incoming_turn: 0,
            incoming_radius: rat(1, 1),
        }
    }

    // the running two-cell example: [0,1) -> B(1/4,1/2), [1,2) -> B(3/2,1/2)
    fn two_cell_round() -> SimpleOneRound {
        SimpleOneRound {
            cells: vec![
                (
                    iv(Bound::Closed(rat(0, 1)), Bound::Open(rat(1, 1))),
                    ResponseTemplate::Absolute(lball((1, 4), (1, 2))),
                ),
                (
                    iv(Bound::Closed(rat(1, 1)), Bound::Open(rat(2, 1))),
                    ResponseTemplate::Absolute(lball((3, 2), (1, 2))),
                ),
            ],
        }
    }

    #[test]
    fn atom_membership() {
        let a = iv(Bound::Closed(rat(0, 1)), Bound::Open(rat(1, 1)));
        assert!(a.contains(&Point::Line(rat(0, 1))).unwrap());
        assert!(a.contains(&Point::Line(rat(99, 100))).unwrap());
        assert!(!a.contains(&Point::Line(rat(1, 1))).unwrap());
        assert!(!a.contains(&Point::Line(rat(-1, 100))).unwrap());

        let b = Atom::Box {
            axes: vec![
                (Bound::Closed(rat(0, 1)), Bound::Closed(rat(1, 1))),
                (Bound::Open(rat(0, 1)), Bound::PosInf),
            ],
        };
        assert!(b.contains(&Point::euclid(vec![rat(1, 1), rat(5, 1)])).unwrap());
        assert!(!b.contains(&Point::euclid(vec![rat(1, 1), rat(0, 1)])).unwrap());

        let s = Atom::Stem(vec![1, 0]);
        assert!(s
            .contains(&Point::Baire(BairePoint::new(vec![1, 0, 7], 0)))
            .unwrap());
        assert!(!s.contains(&Point::Baire(BairePoint::new(vec![1, 1], 0))).unwrap());
        // the all-zero tail point [1,0,0,...] extends stem [1,0] via coords
        assert!(s.contains(&Point::Baire(BairePoint::new(vec![1], 0))).unwrap());

        let d = Atom::BallDiff {
            include: (lball((0, 1), (1, 1)), false),
            exclude: vec![(lball((0, 1), (1, 2)), true)],
        };
        assert!(d.contains(&Point::Line(rat(1, 2))).unwrap(), "boundary of open exclusion stays");
        assert!(!d.contains(&Point::Line(rat(1, 4))).unwrap());
        assert!(d.contains(&Point::Line(rat(1, 1))).unwrap());
        assert!(!d.contains(&Point::Line(rat(3, 2))).unwrap());
    }

    #[test]
    fn respond_dispatch() {
        let round = two_cell_round();
        let (ball, cell) = simple_respond(&round, &lball((1, 2), (1, 1))).unwrap();
        assert_eq!(cell, 0);
        assert_eq!(ball, lball((1, 4), (1, 2)));
        let (ball, cell) = simple_respond(&round, &lball((1, 1), (1, 1))).unwrap();
        assert_eq!(cell, 1);
        assert_eq!(ball, lball((3, 2), (1, 2)));
        assert!(matches!(
            simple_respond(&round, &lball((5, 1), (1, 1))),
            Err(RespondError::NoCell { .. })
        ));
        let mut overlapping = round.clone();
        overlapping.cells.push((
            iv(Bound::Closed(rat(0, 1)), Bound::Closed(rat(2, 1))),
            ResponseTemplate::Absolute(lball((1, 1), (1, 2))),
        ));
        assert!(matches!(
            simple_respond(&overlapping, &lball((1, 2), (1, 1))),
            Err(RespondError::Overlap { first: 0, second: 2, .. })
        ));
    }

    #[test]
    fn two_cell_validation_oracle() {
        // hand analysis: cell 0 sup |x - 1/4| -> 3/4 at the open end 1,
        // exceeding the slack 1/2, so it fails both variants with an interior
        // witness; cell 1 attains slack exactly at the closed end 1, passing
        // plain Schmidt but not the non-tangent rule.
        let round = two_cell_round();
        let issues = validate_simple(&round, &schmidt_half(), &line_ctx());
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].cell, 0);
        let IssueKind::Escape { witness } = &issues[0].kind else {
            panic!("{:?}", issues)
        };
        let Point::Line(w) = witness else { panic!() };
        assert!(*w > rat(3, 4) && *w < rat(1, 1), "witness near the open end");
        assert!((w - &rat(1, 4)).abs() > rat(1, 2), "witness escapes");
        assert_eq!(*w, rat(7, 8));

        let issues = validate_simple(&round, &nt_half(), &line_ctx());
        assert_eq!(issues.len(), 2);
        assert_eq!(
            issues[1],
            CellIssue {
                cell: 1,
                kind: IssueKind::TangentAttained { witness: Point::Line(rat(1, 1)) }
            }
        );
    }

    #[test]
    fn open_end_tangency_is_legal() {
        // sup equals slack but only at the open end: legal in both variants
        let round = SimpleOneRound {
            cells: vec![(
                iv(Bound::Closed(rat(1, 4)), Bound::Open(rat(3, 4))),
                ResponseTemplate::Absolute(lball((1, 4), (1, 2))),
            )],
        };
        assert!(validate_simple(&round, &schmidt_half(), &line_ctx()).is_empty());
        assert!(validate_simple(&round, &nt_half(), &line_ctx()).is_empty());
    }

    #[test]
    fn center_relative_tangency() {
        let round = SimpleOneRound {
            cells: vec![(
                iv(Bound::NegInf, Bound::PosInf),
                ResponseTemplate::CenterRelative { offset: vec![rat(1, 2)], radius: rat(1, 2) },
            )],
        };
        assert!(validate_simple(&round, &schmidt_half(), &line_ctx()).is_empty());
        let issues = validate_simple(&round, &nt_half(), &line_ctx());
        assert!(matches!(issues[0].kind, IssueKind::TangentAttained { .. }));
        let round = SimpleOneRound {
            cells: vec![(
                iv(Bound::NegInf, Bound::PosInf),
                ResponseTemplate::CenterRelative { offset: vec![rat(3, 4)], radius: rat(1, 2) },
            )],
        };
        let issues = validate_simple(&round, &schmidt_half(), &line_ctx());
        assert!(matches!(issues[0].kind, IssueKind::Escape { .. }));
    }

    #[test]
    fn wrong_radius_reported() {
        let round = SimpleOneRound {
            cells: vec![(
                iv(Bound::Closed(rat(0, 1)), Bound::Open(rat(1, 1))),
                ResponseTemplate::Absolute(lball((1, 2), (1, 3))),
            )],
        };
        let issues = validate_simple(&round, &schmidt_half(), &line_ctx());
        assert_eq!(
            issues[0].kind,
            IssueKind::WrongRadius { got: rat(1, 3), want: rat(1, 2) }
        );
        // Banach-Mazur accepts any nonincreasing radius
        let bm = GameParams::banach_mazur(Some(rat(1, 1))).unwrap();
        assert!(validate_simple(&round, &bm, &line_ctx()).is_empty());
    }

    #[test]
    fn unbounded_cell_with_fixed_response_escapes() {
        let round = SimpleOneRound {
            cells: vec![(
                iv(Bound::Closed(rat(0, 1)), Bound::PosInf),
                ResponseTemplate::Absolute(lball((0, 1), (1, 2))),
            )],
        };
        let issues = validate_simple(&round, &schmidt_half(), &line_ctx());
        let IssueKind::Escape { witness: Point::Line(w) } = &issues[0].kind else {
            panic!("{:?}", issues)
        };
        assert!(*w >= rat(0, 1) && (w - &rat(0, 1)).abs() > rat(1, 2));
    }

    #[test]
    fn box_corner_analysis() {
        let ctx = RoundContext {
            space: SpaceKind::Euclid(2),
            incoming_turn: 0,
            incoming_radius: rat(2, 1),
        };
        let cell = Atom::Box {
            axes: vec![
                (Bound::Closed(rat(0, 1)), Bound::Closed(rat(3, 5))),
                (Bound::Closed(rat(0, 1)), Bound::Closed(rat(4, 5))),
            ],
        };
        // slack = 1; farthest corner (3/5, 4/5) from (0,0) at distance 1:
        // attained tangency
        let p2 = GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(2, 1))).unwrap();
        let nt2 = GameParams::non_tangent(rat(1, 2), rat(1, 2), Some(rat(2, 1))).unwrap();
        let resp = ResponseTemplate::Absolute(Ball::new(
            Point::euclid(vec![rat(0, 1), rat(0, 1)]),
            rat(1, 1),
        ));
        let round = SimpleOneRound { cells: vec![(cell.clone(), resp.clone())] };
        assert!(validate_simple(&round, &p2, &ctx).is_empty());
        let issues = validate_simple(&round, &nt2, &ctx);
        assert_eq!(
            issues[0].kind,
            IssueKind::TangentAttained {
                witness: Point::euclid(vec![rat(3, 5), rat(4, 5)])
            }
        );
        // shrink the cell open at the far corner: tangency never attained
        let open_cell = Atom::Box {
            axes: vec![
                (Bound::Closed(rat(0, 1)), Bound::Open(rat(3, 5))),
                (Bound::Closed(rat(0, 1)), Bound::Open(rat(4, 5))),
            ],
        };
        let round = SimpleOneRound { cells: vec![(open_cell, resp.clone())] };
        assert!(validate_simple(&round, &nt2, &ctx).is_empty());
        // grow the cell: escape witnessed at the attained corner
        let big_cell = Atom::Box {
            axes: vec![
                (Bound::Closed(rat(0, 1)), Bound::Closed(rat(2, 1))),
                (Bound::Closed(rat(0, 1)), Bound::Closed(rat(2, 1))),
            ],
        };
        let round = SimpleOneRound { cells: vec![(big_cell, resp)] };
        let issues = validate_simple(&round, &p2, &ctx);
        assert_eq!(
            issues[0].kind,
            IssueKind::Escape { witness: Point::euclid(vec![rat(2, 1), rat(2, 1)]) }
        );
    }

    #[test]
    fn box_open_corner_escape_witness_is_interior() {
        let ctx = RoundContext {
            space: SpaceKind::Euclid(2),
            incoming_turn: 0,
            incoming_radius: rat(1, 1),
        };
        let cell = Atom::Box {
            axes: vec![
                (Bound::Closed(rat(0, 1)), Bound::Open(rat(2, 1))),
                (Bound::Closed(rat(0, 1)), Bound::Open(rat(2, 1))),
            ],
        };
        let resp = ResponseTemplate::Absolute(Ball::new(
            Point::euclid(vec![rat(0, 1), rat(0, 1)]),
            rat(1, 2),
        ));
        let params = schmidt_half();
        let round = SimpleOneRound { cells: vec![(cell.clone(), resp)] };
        let issues = validate_simple(&round, &params, &round_ctx_of(&ctx));
        let IssueKind::Escape { witness } = &issues[0].kind else {
            panic!("{:?}", issues)
        };
        assert!(cell.contains(witness).unwrap(), "witness lies in the cell");
        let d2 = dist_sq(witness, &Point::euclid(vec![rat(0, 1), rat(0, 1)])).unwrap();
        assert!(d2 > rat(1, 4), "witness escapes the slack 1/2");
    }

    fn round_ctx_of(ctx: &RoundContext) -> RoundContext {
        ctx.clone()
    }

    #[test]
    fn stem_cell_analysis() {
        let ctx = RoundContext {
            space: SpaceKind::Baire,
            incoming_turn: 0,
            incoming_radius: rat(1, 2),
        };
        let params = schmidt_half();
        let nt = nt_half();
        // response centered on an extension of the stem: sup = 2^-2 = slack
        let conforming = ResponseTemplate::Absolute(Ball::new(
            Point::Baire(BairePoint::new(vec![1, 3], 0)),
            rat(1, 4),
        ));
        let round = SimpleOneRound { cells: vec![(Atom::Stem(vec![1]), conforming)] };
        assert!(validate_simple(&round, &params, &ctx).is_empty());
        let issues = validate_simple(&round, &nt, &ctx);
        let IssueKind::TangentAttained { witness } = &issues[0].kind else {
            panic!("{:?}", issues)
        };
        // the witness disagrees with the center first at coordinate 1
        let Point::Baire(w) = witness else { panic!() };
        assert_eq!(w.coord(0), 1);
        assert_ne!(w.coord(1), 3);
        // center straying off the stem: sup = 2^-1 > slack
        let stray = ResponseTemplate::Absolute(Ball::new(
            Point::Baire(BairePoint::new(vec![2], 0)),
            rat(1, 4),
        ));
        let round = SimpleOneRound { cells: vec![(Atom::Stem(vec![1]), stray)] };
        let issues = validate_simple(&round, &params, &ctx);
        assert!(matches!(issues[0].kind, IssueKind::Escape { .. }));
    }

    #[test]
    fn balldiff_conservative_bounds() {
        let ctx = RoundContext {
            space: SpaceKind::Euclid(2),
            incoming_turn: 0,
            incoming_radius: rat(1, 1),
        };
        let params = GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 1))).unwrap();
        let nt = GameParams::non_tangent(rat(1, 2), rat(1, 2), Some(rat(1, 1))).unwrap();
        let inc = Ball::new(Point::euclid(vec![rat(0, 1), rat(0, 1)]), rat(1, 4));
        let cell = Atom::BallDiff { include: (inc.clone(), false), exclude: vec![] };
        let resp = ResponseTemplate::Absolute(Ball::new(
            Point::euclid(vec![rat(0, 1), rat(0, 1)]),
            rat(1, 2),
        ));
        // D + r_inc = 1/4 < slack 1/2: certified in both variants
        let round = SimpleOneRound { cells: vec![(cell, resp.clone())] };
        assert!(validate_simple(&round, &params, &ctx).is_empty());
        assert!(validate_simple(&round, &nt, &ctx).is_empty());
        // include radius 1/2: bound attains the slack: plain ok, non-tangent
        // honestly uncertified
        let inc2 = Ball::new(Point::euclid(vec![rat(0, 1), rat(0, 1)]), rat(1, 2));
        let cell2 = Atom::BallDiff { include: (inc2, false), exclude: vec![] };
        let round = SimpleOneRound { cells: vec![(cell2, resp.clone())] };
        assert!(validate_simple(&round, &params, &ctx).is_empty());
        let issues = validate_simple(&round, &nt, &ctx);
        assert!(matches!(issues[0].kind, IssueKind::Uncertified { .. }));
        // moving the response away: bound exceeds slack
        let far = ResponseTemplate::Absolute(Ball::new(
            Point::euclid(vec![rat(2, 1), rat(0, 1)]),
            rat(1, 2),
        ));
        let inc3 = Ball::new(Point::euclid(vec![rat(0, 1), rat(0, 1)]), rat(1, 4));
        let cell3 = Atom::BallDiff { include: (inc3, false), exclude: vec![] };
        let round = SimpleOneRound { cells: vec![(cell3, far)] };
        let issues = validate_simple(&round, &params, &ctx);
        assert!(matches!(issues[0].kind, IssueKind::Uncertified { .. }));
    }

    #[test]
    fn disjointness_checks() {
        let r0 = iv(Bound::Closed(rat(0, 1)), Bound::Open(rat(1, 1)));
        let r1 = iv(Bound::Closed(rat(1, 1)), Bound::Open(rat(2, 1)));
        assert!(check_disjoint(0, &r0, 1, &r1).is_none(), "half-open cells tile");
        let closed = iv(Bound::Closed(rat(0, 1)), Bound::Closed(rat(1, 1)));
        let issue = check_disjoint(0, &closed, 1, &r1).unwrap();
        assert_eq!(
            issue.kind,
            IssueKind::Overlap { other: 1, witness: Point::Line(rat(1, 1)) }
        );
        let shifted = iv(Bound::Closed(rat(1, 2)), Bound::Open(rat(3, 2)));
        let issue = check_disjoint(0, &r0, 1, &shifted).unwrap();
        let IssueKind::Overlap { witness: Point::Line(w), .. } = issue.kind else {
            panic!()
        };
        assert_eq!(w, rat(3, 4));

        // stems: prefix overlap, divergence disjoint
        assert!(check_disjoint(0, &Atom::Stem(vec![1]), 1, &Atom::Stem(vec![1, 2])).is_some());
        assert!(check_disjoint(0, &Atom::Stem(vec![1]), 1, &Atom::Stem(vec![2])).is_none());

        // ball differences: include balls far apart certify
        let b = |x: i64, r: (i64, i64)| {
            Ball::new(Point::euclid(vec![rat(x, 1), rat(0, 1)]), rat(r.0, r.1))
        };
        let d1 = Atom::BallDiff { include: (b(0, (1, 1)), false), exclude: vec![] };
        let d2 = Atom::BallDiff { include: (b(5, (1, 1)), false), exclude: vec![] };
        assert!(check_disjoint(0, &d1, 1, &d2).is_none());
        // tangent closed includes are not certified (they share a point)
        let d3 = Atom::BallDiff { include: (b(2, (1, 1)), false), exclude: vec![] };
        assert!(matches!(
            check_disjoint(0, &d1, 1, &d3).unwrap().kind,
            IssueKind::PotentialOverlap { .. }
        ));
        // but one open flag certifies the tangent pair
        let d3open = Atom::BallDiff { include: (b(2, (1, 1)), true), exclude: vec![] };
        assert!(check_disjoint(0, &d1, 1, &d3open).is_none());
        // second cell carved out of the first: include inside an exclusion
        let carved = Atom::BallDiff {
            include: (b(0, (1, 1)), false),
            exclude: vec![(b(0, (1, 2)), false)],
        };
        let inner = Atom::BallDiff { include: (b(0, (1, 2)), false), exclude: vec![] };
        assert!(check_disjoint(0, &carved, 1, &inner).is_none());
    }

    #[test]
    fn first_fit_chain_validates() {
        // disjointified open cover: B_k minus earlier balls, closed includes
        // with open exclusions
        let b = |x: (i64, i64)| Ball::new(Point::euclid(vec![rat(x.0, x.1), rat(0, 1)]), rat(1, 1));
        let cells: Vec<Atom> = (0..3)
            .map(|k| Atom::BallDiff {
                include: (b((k, 1)), false),
                exclude: (0..k).map(|j| (b((j, 1)), false)).collect(),
            })
            .collect();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let issue = check_disjoint(i, &cells[i], j, &cells[j]);
                assert!(issue.is_none(), "cells {} and {}: {:?}", i, j, issue);
            }
        }
    }

    #[test]
    fn simple_strategy_replay() {
        // round-indexed responses: cell choice at round 0 selects the table
        // used at round 1
        let round0 = two_cell_round();
        let round1_left = SimpleOneRound {
            cells: vec![(
                iv(Bound::NegInf, Bound::PosInf),
                ResponseTemplate::CenterRelative { offset: vec![rat(1, 8)], radius: rat(1, 8) },
            )],
        };
        let round1_right = SimpleOneRound {
            cells: vec![(
                iv(Bound::NegInf, Bound::PosInf),
                ResponseTemplate::CenterRelative { offset: vec![rat(-1, 8)], radius: rat(1, 8) },
            )],
        };
        let mut table = BTreeMap::new();
        table.insert(vec![], round0);
        table.insert(vec![0], round1_left);
        table.insert(vec![1], round1_right);
        let sigma = SimpleStrategy::for_ii(SpaceKind::Line, table);

        let params = schmidt_half();
        let mut pos = Position::empty();
        pos.push_unchecked(lball((1, 2), (1, 1)));
        let (b, cell, path) = sigma.respond_in(&pos).unwrap();
        assert_eq!((cell, path.as_slice()), (Some(0), &[0][..]));
        assert_eq!(b, lball((1, 4), (1, 2)));
        pos.push_unchecked(b);
        // I shrinks by beta = 1/2 wherever it likes inside
        pos.push_unchecked(lball((1, 4), (1, 4)));
        let (b, cell, path) = sigma.respond_in(&pos).unwrap();
        assert_eq!((cell, path.as_slice()), (Some(0), &[0, 0][..]));
        assert_eq!(b, lball((3, 8), (1, 8)));
        let _ = params;

        // missing round key reported
        let mut deep = pos.clone();
        deep.push_unchecked(lball((3, 8), (1, 8)));
        deep.push_unchecked(lball((3, 8), (1, 16)));
        assert!(sigma.respond_in(&deep).is_err());
    }

    #[test]
    fn lazy_strategy_and_materialize() {
        let gen = |key: &[usize]| {
            if key.len() > 2 {
                return None;
            }
            Some(SimpleOneRound {
                cells: vec![(
                    iv(Bound::NegInf, Bound::PosInf),
                    ResponseTemplate::CenterRelative {
                        offset: vec![Rat::zero()],
                        radius: rat(1, 2),
                    },
                )],
            })
        };
        let sigma = SimpleStrategy::lazy_ii(SpaceKind::Line, gen);
        let mut pos = Position::empty();
        pos.push_unchecked(lball((0, 1), (1, 1)));
        let b = sigma.next(&pos).unwrap();
        assert_eq!(b.radius, rat(1, 2));
        let table = sigma.materialize(&[vec![], vec![0], vec![0, 0], vec![0, 0, 0]]);
        let RoundSource::Table(t) = &table.rounds else { panic!() };
        assert_eq!(t.len(), 3, "generator declined the deep key");
    }

    #[test]
    fn doc_round_trip() {
        let mut table = BTreeMap::new();
        table.insert(vec![], two_cell_round());
        table.insert(
            vec![1],
            SimpleOneRound {
                cells: vec![
                    (
                        Atom::Box {
                            axes: vec![
                                (Bound::NegInf, Bound::Open(rat(0, 1))),
                                (Bound::Closed(rat(-1, 2)), Bound::PosInf),
                            ],
                        },
                        ResponseTemplate::CenterRelative {
                            offset: vec![rat(1, 8), rat(0, 1)],
                            radius: rat(1, 8),
                        },
                    ),
                    (
                        Atom::BallDiff {
                            include: (
                                Ball::new(Point::euclid(vec![rat(0, 1), rat(0, 1)]), rat(1, 1)),
                                false,
                            ),
                            exclude: vec![(
                                Ball::new(Point::euclid(vec![rat(1, 2), rat(0, 1)]), rat(1, 4)),
                                true,
                            )],
                        },
                        ResponseTemplate::Absolute(Ball::new(
                            Point::euclid(vec![rat(0, 1), rat(0, 1)]),
                            rat(1, 8),
                        )),
                    ),
                    (
                        Atom::Stem(vec![0, 2]),
                        ResponseTemplate::Absolute(Ball::new(
                            Point::Baire(BairePoint::new(vec![0, 2], 0)),
                            rat(1, 8),
                        )),
                    ),
                ],
            },
        );
        let sigma = SimpleStrategy::for_i(SpaceKind::Line, lball((0, 1), (1, 1)), table);
        let text = emit_simple(&sigma).unwrap();
        let back = parse_simple(&text).unwrap_or_else(|e| panic!("{}\n{}", e, text));
        assert_eq!(back.player, Player::I);
        assert_eq!(back.first, sigma.first);
        let (RoundSource::Table(a), RoundSource::Table(b)) = (&sigma.rounds, &back.rounds) else {
            panic!()
        };
        assert_eq!(a, b);
        // and the text itself is stable
        assert_eq!(emit_simple(&back).unwrap(), text);
    }

    #[test]
    fn doc_parse_errors() {
        assert!(parse_simple("").is_err());
        assert!(parse_simple("simple-strategy v1\nplayer II\n").is_err(), "missing space");
        assert!(
            parse_simple("simple-strategy v1\nplayer I\nspace line\n").is_err(),
            "player I needs first"
        );
        let ok = "simple-strategy v1\nplayer II\nspace line\nround .\ncell interval [0,1) -> abs [1/4] 1/2\nend\n";
        assert!(parse_simple(ok).is_ok());
        assert!(parse_simple(&ok.replace("end\n", "")).is_err(), "unclosed round");
        assert!(parse_simple(&ok.replace("[0,1)", "[0;1)")).is_err(), "bad interval");
        assert!(
            parse_simple(&ok.replace("round .", "round .\nround .")).is_err(),
            "nested round"
        );
    }
}
