//! Matches between strategies, with cell bookkeeping for simple ones.
//!
//! `run_match` is the engine loop of `play` extended with one convenience:
//! when a contestant is a simple strategy, the cell its response fired from
//! is stamped onto the trace entry, and its dispatch failures (no cell for
//! the incoming center, overlapping cells at it, a round the table or
//! generator does not provide) are charged to that player as a resignation.
//! Failures are reported in discovery order: the first failing dispatch of
//! the replay ends the run.

use crate::engine::{
    adjudicate_limit, legal_move, Certificate, EngineError, GameParams, MoveVerdict, Outcome,
    Player, Position, Trace, TraceEntry,
};
use crate::simple::SimpleStrategy;
use crate::space::Ball;
use crate::strategy::{Strategy, StrategyError};
use crate::target::{BallAnswer, TargetSet};

pub enum Contestant<'a> {
    Simple(&'a SimpleStrategy),
    Free(&'a dyn Strategy),
}

impl Contestant<'_> {
    fn next(&self, pos: &Position) -> Result<(Ball, Option<usize>), StrategyError> {
        match self {
            Contestant::Simple(s) => s.respond_in(pos).map(|(b, cell, _)| (b, cell)),
            Contestant::Free(s) => s.next(pos).map(|b| (b, None)),
        }
    }

    fn as_strategy(&self) -> &dyn Strategy {
        match self {
            Contestant::Simple(s) => *s,
            Contestant::Free(s) => *s,
        }
    }
}

pub fn run_match(
    params: &GameParams,
    i: &Contestant,
    ii: &Contestant,
    target: &dyn TargetSet,
    max_moves: usize,
) -> Result<(Trace, Outcome), EngineError> {
    let mut pos = Position::empty();
    let mut trace = Trace::new();
    let mut outcome = None;

    for turn in 0..max_moves {
        let player = Player::of_turn(turn);
        let side = match player {
            Player::I => i,
            Player::II => ii,
        };
        let (ball, cell) = match side.next(&pos) {
            Ok(pair) => pair,
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
        trace.entries.push(TraceEntry { turn, player, ball: ball.clone(), verdict, cell });
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
        None => adjudicate_limit(params, &pos, i.as_strategy(), ii.as_strategy(), target)?,
    };
    trace.outcome = Some(outcome.clone());
    Ok((trace, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    use crate::engine::play;
    use crate::rat::rat;
    use crate::simple::{Atom, Bound, ResponseTemplate, SimpleOneRound, SimpleStrategy};
    use crate::space::{Point, SpaceKind};
    use crate::target::{Opaque, RayUnionQ};

    fn lball(c: (i64, i64), r: (i64, i64)) -> Ball {
        Ball::new(Point::Line(rat(c.0, c.1)), rat(r.0, r.1))
    }

    fn iv(lo: Bound, hi: Bound) -> Atom {
        Atom::Interval { lo, hi }
    }

    fn universal_rel(offset: (i64, i64), radius: (i64, i64)) -> SimpleOneRound {
        SimpleOneRound {
            cells: vec![(
                iv(Bound::NegInf, Bound::PosInf),
                ResponseTemplate::CenterRelative {
                    offset: vec![rat(offset.0, offset.1)],
                    radius: rat(radius.0, radius.1),
                },
            )],
        }
    }

    #[test]
    fn cells_stamped_on_simple_moves() {
        let params = crate::engine::GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 1)))
            .unwrap();
        // II: two half-line cells at round 0, then a single drift cell
        let mut ii_table = BTreeMap::new();
        ii_table.insert(
            vec![],
            SimpleOneRound {
                cells: vec![
                    (
                        iv(Bound::NegInf, Bound::Open(rat(0, 1))),
                        ResponseTemplate::CenterRelative {
                            offset: vec![rat(-1, 2)],
                            radius: rat(1, 2),
                        },
                    ),
                    (
                        iv(Bound::Closed(rat(0, 1)), Bound::PosInf),
                        ResponseTemplate::CenterRelative {
                            offset: vec![rat(1, 2)],
                            radius: rat(1, 2),
                        },
                    ),
                ],
            },
        );
        ii_table.insert(vec![0], universal_rel((-1, 8), (1, 8)));
        ii_table.insert(vec![1], universal_rel((1, 8), (1, 8)));
        let sigma_ii = SimpleStrategy::for_ii(SpaceKind::Line, ii_table);

        let mut i_table = BTreeMap::new();
        i_table.insert(vec![], universal_rel((0, 1), (1, 4)));
        i_table.insert(vec![0], universal_rel((0, 1), (1, 16)));
        let sigma_i = SimpleStrategy::for_i(SpaceKind::Line, lball((1, 4), (1, 1)), i_table);

        let (trace, outcome) = run_match(
            &params,
            &Contestant::Simple(&sigma_i),
            &Contestant::Simple(&sigma_ii),
            &Opaque(SpaceKind::Line),
            4,
        )
        .unwrap();
        assert_eq!(outcome.winner(), None);
        let cells: Vec<Option<usize>> = trace.entries.iter().map(|e| e.cell).collect();
        // I's first move unstamped; II hits cell 1 (center 1/4 >= 0), I's
        // table answers II's ball in its universal cell 0, II then uses round
        // [1]'s single cell
        assert_eq!(cells, vec![None, Some(1), Some(0), Some(0)]);
        let centers: Vec<&Point> = trace.entries.iter().map(|e| &e.ball.center).collect();
        assert_eq!(centers[1], &Point::Line(rat(3, 4)));
        assert_eq!(centers[2], &Point::Line(rat(3, 4)));
        assert_eq!(centers[3], &Point::Line(rat(7, 8)));
    }

    #[test]
    fn no_cell_is_a_resignation_loss() {
        let params = crate::engine::GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 1)))
            .unwrap();
        let mut table = BTreeMap::new();
        table.insert(
            vec![],
            SimpleOneRound {
                cells: vec![(
                    iv(Bound::Closed(rat(10, 1)), Bound::PosInf),
                    ResponseTemplate::CenterRelative { offset: vec![rat(0, 1)], radius: rat(1, 2) },
                )],
            },
        );
        let sigma_ii = SimpleStrategy::for_ii(SpaceKind::Line, table);
        let opener = crate::strategy::WithFirstMove {
            first: lball((0, 1), (1, 1)),
            inner: Box::new(crate::strategy::concentric(params.clone())),
        };
        let (trace, outcome) = run_match(
            &params,
            &Contestant::Free(&opener),
            &Contestant::Simple(&sigma_ii),
            &Opaque(SpaceKind::Line),
            6,
        )
        .unwrap();
        let Outcome::WinI(Certificate::Resignation { by, reason }) = &outcome else {
            panic!("{:?}", outcome);
        };
        assert_eq!(*by, Player::II);
        assert!(reason.contains("no cell"), "{}", reason);
        assert_eq!(trace.entries.len(), 1);
    }

    #[test]
    fn overlap_is_charged_to_the_owner() {
        let params = crate::engine::GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 1)))
            .unwrap();
        let mut table = BTreeMap::new();
        table.insert(
            vec![],
            SimpleOneRound {
                cells: vec![
                    (
                        iv(Bound::NegInf, Bound::Closed(rat(0, 1))),
                        ResponseTemplate::CenterRelative {
                            offset: vec![rat(0, 1)],
                            radius: rat(1, 2),
                        },
                    ),
                    (
                        iv(Bound::Closed(rat(0, 1)), Bound::PosInf),
                        ResponseTemplate::CenterRelative {
                            offset: vec![rat(0, 1)],
                            radius: rat(1, 2),
                        },
                    ),
                ],
            },
        );
        let sigma_ii = SimpleStrategy::for_ii(SpaceKind::Line, table);
        let opener = crate::strategy::WithFirstMove {
            first: lball((0, 1), (1, 1)),
            inner: Box::new(crate::strategy::concentric(params.clone())),
        };
        let (_, outcome) = run_match(
            &params,
            &Contestant::Free(&opener),
            &Contestant::Simple(&sigma_ii),
            &Opaque(SpaceKind::Line),
            6,
        )
        .unwrap();
        let Outcome::WinI(Certificate::Resignation { by, reason }) = &outcome else {
            panic!("{:?}", outcome);
        };
        assert_eq!(*by, Player::II);
        assert!(reason.contains("both contain"), "{}", reason);
    }

    #[test]
    fn free_contestants_agree_with_play() {
        let params = crate::engine::GameParams::schmidt(rat(1, 4), rat(1, 2), Some(rat(2, 1)))
            .unwrap();
        let opener = crate::strategy::WithFirstMove {
            first: lball((0, 1), (2, 1)),
            inner: Box::new(crate::strategy::concentric(params.clone())),
        };
        let maxdist = crate::strategy::maximize_distance_from(
            params.clone(),
            crate::strategy::Anchor::Point(Point::Line(rat(0, 1))),
        );
        let (t1, o1) = play(&params, &opener, &maxdist, &RayUnionQ, 10).unwrap();
        let (t2, o2) = run_match(
            &params,
            &Contestant::Free(&opener),
            &Contestant::Free(&maxdist),
            &RayUnionQ,
            10,
        )
        .unwrap();
        assert_eq!(o1, o2);
        assert_eq!(t1, t2);
    }

    #[test]
    fn illegal_simple_response_is_a_violation() {
        // the table responds with the wrong radius; the referee catches it
        let params = crate::engine::GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 1)))
            .unwrap();
        let mut table = BTreeMap::new();
        table.insert(vec![], universal_rel((0, 1), (1, 3)));
        let sigma_ii = SimpleStrategy::for_ii(SpaceKind::Line, table);
        let opener = crate::strategy::WithFirstMove {
            first: lball((0, 1), (1, 1)),
            inner: Box::new(crate::strategy::concentric(params.clone())),
        };
        let (trace, outcome) = run_match(
            &params,
            &Contestant::Free(&opener),
            &Contestant::Simple(&sigma_ii),
            &Opaque(SpaceKind::Line),
            6,
        )
        .unwrap();
        let Outcome::WinI(Certificate::Violation { by, verdict, .. }) = &outcome else {
            panic!("{:?}", outcome);
        };
        assert_eq!((*by, *verdict), (Player::II, MoveVerdict::IllegalRadius));
        assert_eq!(trace.entries.last().unwrap().cell, Some(0));
    }
}
