//! Acceptance gate: ten fixed criteria, one pass/fail line each. Every
//! criterion owns a wall-clock budget; blowing the budget fails it even if
//! the math checked out. Run with -- --nocapture to watch the table.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::rc::Rc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schmidt_games::cylinder::{
    critical_radius, extract_uniformization, greedy_duel, responder_strategy, RationalAngle,
    RelationTable,
};
use schmidt_games::engine::{
    legal_move, play, required_radius, Certificate, GameParams, MoveVerdict, Outcome, Position,
};
use schmidt_games::rat::{rat, Rat};
use schmidt_games::reductions::{
    baire_reduce, baire_unreduce, gstar_to_real_i, half_split_sigma, matched_prefix,
    simplify_non_tangent, simplify_on_line, simplify_strategy_on_line,
    stability_radius_from_slack, ReduceError, StemBall,
};
use schmidt_games::simple::{Atom, Bound, ResponseTemplate};
use schmidt_games::space::{dist_exact, Ball, Point, SpaceKind};
use schmidt_games::strategy::{
    avoid_enumeration, concentric, maximize_distance_from, nth_rational, random_rule_following,
    tangent_toward, Anchor, Direction, Strategy, WithFirstMove,
};
use schmidt_games::target::{BallAnswer, IntervalTarget, RayUnionQ, TargetSet};
use schmidt_games::transfer::{
    pick_rho_prime, rho_prime_bounds, transfer_ii, DenseEnum, TransferParams,
};

fn line_ball(c: Rat, r: Rat) -> Ball {
    Ball::new(Point::Line(c), r)
}

fn check(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn oops(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Example game on the line: II maximizes distance from the origin against
/// rho = 2, alpha = 1/4, beta = 1/2 and wins the ray-or-rational target with
/// a first-response ball certificate whose near edge sits exactly at
/// distance rho(1 - 2 alpha) = 1.
fn c01_ray_escape() -> Result<String, String> {
    let params = GameParams::schmidt(rat(1, 4), rat(1, 2), Some(rat(2, 1))).map_err(oops)?;
    let boundary = &rat(2, 1) * &(&rat(1, 1) - &(&rat(2, 1) * &rat(1, 4)));
    check(boundary == rat(1, 1), "tangency boundary rho(1-2a) is not 1")?;
    let i = WithFirstMove {
        first: line_ball(rat(0, 1), rat(2, 1)),
        inner: Box::new(concentric(params.clone())),
    };
    let ii = maximize_distance_from(params.clone(), Anchor::Point(Point::Line(rat(0, 1))));
    let (trace, outcome) = play(&params, &i, &ii, &RayUnionQ, 16).map_err(oops)?;
    let Outcome::WinII(Certificate::BallInside(ball)) = &outcome else {
        return Err(format!("expected a II ball certificate, got {:?}", outcome));
    };
    check(trace.entries.len() == 2, "win was not at depth 1")?;
    check(ball.radius == rat(1, 2), "certificate radius is not 1/2")?;
    let Point::Line(c) = &ball.center else { unreachable!("line game") };
    let near = &c.abs() - &ball.radius;
    check(near == rat(1, 1), "near edge is not exactly at distance 1")?;
    Ok(format!("II won at depth 1 with ball {} {}", ball.center, ball.radius))
}

/// Example game, first player's side: opening on (0, 1/2) with beta = 1/3,
/// enumeration avoidance excludes the k-th rational of (-1, 1) from its
/// stage ball onward, 64 stages deep, and the run stays inside (-1, 1).
fn c02_rational_avoidance() -> Result<String, String> {
    let params = GameParams::schmidt(rat(1, 2), rat(1, 3), Some(rat(1, 4))).map_err(oops)?;
    let avoid = avoid_enumeration(params.clone(), rat(-1, 1), rat(1, 1)).map_err(oops)?;
    let i = WithFirstMove {
        first: line_ball(rat(1, 4), rat(1, 4)),
        inner: Box::new(avoid),
    };
    let ii = concentric(params.clone());
    let mut pos = Position::empty();
    for turn in 0..130 {
        let mover: &dyn Strategy = if turn % 2 == 0 { &i } else { &ii };
        let ball = mover.next(&pos).map_err(oops)?;
        pos.push_checked(&params, ball)
            .map_err(|e| format!("turn {}: {}", turn, e))?;
    }
    for k in 0..64usize {
        let q = nth_rational(&rat(-1, 1), &rat(1, 1), k);
        for (idx, ball) in pos.balls().iter().enumerate().skip(2 * k + 2) {
            let Point::Line(c) = &ball.center else { unreachable!() };
            let d = (&q - c).abs();
            if d <= ball.radius {
                return Err(format!(
                    "rational {} (stage {}) is inside ball {} of the run",
                    q, k, idx
                ));
            }
        }
    }
    let last = pos.balls().last().expect("run is nonempty");
    let unit = IntervalTarget::new(rat(-1, 1), rat(1, 1)).map_err(oops)?;
    check(
        unit.ball_inside(last).map_err(oops)? == BallAnswer::Yes,
        "enclosing ball escapes (-1, 1)",
    )?;
    Ok(format!(
        "64 stages avoided, enclosing radius {} inside the unit interval",
        last.radius
    ))
}

/// Critical radius closed form, plus duel distances r(1 - (ab)^N) for
/// N <= 20 over 25 seeded parameter draws.
fn c03_duel_closed_form() -> Result<String, String> {
    check(
        critical_radius(&rat(1, 2), &rat(1, 2), &rat(1, 1)) == rat(1, 3),
        "critical radius at (1/2, 1/2, 1) is not 1/3",
    )?;
    let angles = [
        RationalAngle::new(rat(1, 1), rat(0, 1)).map_err(oops)?,
        RationalAngle::new(rat(0, 1), rat(1, 1)).map_err(oops)?,
        RationalAngle::new(rat(3, 5), rat(4, 5)).map_err(oops)?,
        RationalAngle::new(rat(5, 13), rat(12, 13)).map_err(oops)?,
        RationalAngle::new(rat(8, 17), rat(15, 17)).map_err(oops)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for draw in 0..25 {
        let alpha = rat(rng.gen_range(1..4), 4);
        let beta = rat(rng.gen_range(1..4), 4);
        let rho = rat(rng.gen_range(1..=3), 1);
        let x = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
        let angle = &angles[rng.gen_range(0..angles.len())];
        let r = critical_radius(&alpha, &beta, &rho);
        let dists = greedy_duel(&alpha, &beta, &rho, &x, angle, 20).map_err(oops)?;
        let ab = &alpha * &beta;
        let mut pow = rat(1, 1);
        for n in 1..=20usize {
            pow = &pow * &ab;
            let want = &r * &(&rat(1, 1) - &pow);
            if dists[2 * n - 1] != want {
                return Err(format!(
                    "draw {} round {}: distance {} wants {}",
                    draw,
                    n,
                    dists[2 * n - 1],
                    want
                ));
            }
        }
    }
    Ok("closed form holds through round 20 on 25 draws".into())
}

/// Uniformization extraction from the three-row relation: the extracted map
/// is contained in the table and the single-valued row is forced.
fn c04_uniformization() -> Result<String, String> {
    let a = RationalAngle::new(rat(3, 5), rat(4, 5)).map_err(oops)?;
    let b = RationalAngle::new(rat(4, 5), rat(3, 5)).map_err(oops)?;
    let rel = RelationTable::new(vec![
        (rat(0, 1), a.clone()),
        (rat(1, 1), a.clone()),
        (rat(1, 1), b),
    ]);
    let tau = responder_strategy(&rel, &rat(1, 2), &rat(1, 2), &rat(1, 1)).map_err(oops)?;
    let out = extract_uniformization(&tau, &rel.domain(), &rat(1, 2), &rat(1, 1));
    check(out.len() == 2, "domain should have two points")?;
    for (x, res) in &out {
        let angle = res.as_ref().map_err(|nc| nc.to_string())?;
        check(rel.contains(x, angle), "extracted angle is not a table row")?;
        if *x == rat(0, 1) {
            check(*angle == a, "single-valued row at 0 was not forced")?;
        }
    }
    Ok("f(0) forced, f(1) in the table".into())
}

/// Parameter transfer at (1/4, 1/2) -> (1/2, 1/4), rho = 1: exact window,
/// pick, and allowances, then the transferred tangent-left II against 1000
/// seeded opponents with dyadic snapping. Checks legality of every reply,
/// turn-by-turn equality of real II centers with the shadow's responses,
/// and strict snap bounds.
fn c05_transfer_fidelity() -> Result<String, String> {
    let (lo, hi) =
        rho_prime_bounds(&rat(1, 4), &rat(1, 2), &rat(1, 2), &rat(1, 4), &rat(1, 1))
            .map_err(oops)?;
    check(lo == rat(1, 3) && hi == rat(3, 2), "window is not (1/3, 3/2)")?;
    let picked = pick_rho_prime(&lo, &hi, &rat(1, 4), &rat(1, 2))
        .ok_or("no radius picked from the window")?;
    check(picked == rat(1, 1), "picked radius is not 1")?;
    let params = TransferParams::new(
        rat(1, 4),
        rat(1, 2),
        rat(1, 2),
        rat(1, 4),
        rat(1, 1),
        picked,
        DenseEnum::Dyadics,
    )
    .map_err(oops)?;
    check(params.epsilon_ii(0) == rat(1, 4), "eps_0 is not 1/4")?;
    check(params.epsilon_ii(1) == rat(1, 32), "eps_1 is not 1/32")?;

    let real = params.unprimed_game();
    let primed = params.primed_game();
    let tau: Rc<dyn Strategy> = Rc::new(tangent_toward(primed.clone(), Direction::Left));
    let ii = transfer_ii(tau.clone(), params.clone());
    let rounds = 6usize;
    for seed in 0..1000u64 {
        let mover = random_rule_following(real.clone(), SpaceKind::Line, seed);
        let mut pos = Position::empty();
        for k in 0..rounds {
            let mine = mover.next(&pos).map_err(oops)?;
            pos.push_checked(&real, mine)
                .map_err(|e| format!("seed {}: I move refused: {}", seed, e))?;
            let shadow = ii.shadow_position(&pos).map_err(oops)?;
            for m in 0..=k {
                let d = dist_exact(&pos.balls()[2 * m].center, &shadow.balls()[2 * m].center)
                    .map_err(oops)?
                    .ok_or("irrational snap distance")?;
                if d >= params.epsilon_ii(m) {
                    return Err(format!(
                        "seed {} round {}: snap distance {} is not under {}",
                        seed,
                        m,
                        d,
                        params.epsilon_ii(m)
                    ));
                }
            }
            for m in 0..k {
                if shadow.balls()[2 * m + 1].center != pos.balls()[2 * m + 1].center {
                    return Err(format!(
                        "seed {} round {}: real II center differs from the shadow response",
                        seed, m
                    ));
                }
            }
            Position::from_balls(&primed, shadow.balls().to_vec())
                .map_err(|e| format!("seed {}: shadow run illegal: {}", seed, e))?;
            let reply = ii.next(&pos).map_err(oops)?;
            let want = tau.next(&shadow).map_err(oops)?;
            check(reply.center == want.center, "reply center is not the shadow response")?;
            pos.push_checked(&real, reply)
                .map_err(|e| format!("seed {}: II move refused: {}", seed, e))?;
        }
    }
    Ok("1000 runs: legal, center-faithful, snaps strictly inside allowances".into())
}

/// Concentric play over [0, 1) at alpha = beta = 1/2, rho = 1 sweeps to the
/// two half cells exactly and validates; matched runs reproduce the
/// strategy's responses for 20 rounds against 100 seeded opponents.
fn c06_simplification() -> Result<String, String> {
    let params = GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 1))).map_err(oops)?;
    let strat = concentric(params.clone());
    let out = simplify_on_line(&strat, &params, &Position::empty(), &rat(0, 1), &rat(1, 1), 16)
        .map_err(oops)?;
    check(out.complete && out.issues.is_empty(), "sweep incomplete or invalid")?;
    check(out.oneround.cells.len() == 2, "expected exactly two cells")?;
    for (i, lo_want, hi_want) in [(0usize, rat(0, 1), rat(1, 2)), (1, rat(1, 2), rat(1, 1))] {
        let (atom, resp) = &out.oneround.cells[i];
        let Atom::Interval { lo: Bound::Closed(lo), hi: Bound::Open(hi) } = atom else {
            return Err(format!("cell {} has the wrong shape: {:?}", i, atom));
        };
        check(*lo == lo_want && *hi == hi_want, "cell bounds are not the half intervals")?;
        let ResponseTemplate::Absolute(ball) = resp else {
            return Err("swept response is not absolute".into());
        };
        check(
            *ball == line_ball(lo_want.clone(), rat(1, 2)),
            "frozen response is not the half ball at the cell start",
        )?;
    }

    let sigma: Rc<dyn Strategy> = Rc::new(concentric(params.clone()));
    let table =
        simplify_strategy_on_line(sigma.clone(), &params, &rat(0, 1), &rat(1, 1), 4096, 20)
            .map_err(oops)?;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pos = Position::empty();
        let mut final_path = Vec::new();
        for round in 0..20usize {
            let r_in = required_radius(&params, pos.turn(), &rat(1, 1)).map_err(oops)?;
            let z = if round == 0 {
                rat(rng.gen_range(0..16), 16)
            } else {
                let prev = pos.last().expect("nonempty");
                let Point::Line(c) = &prev.center else { unreachable!() };
                let slack = &prev.radius - &r_in;
                c + &(&slack * &rat(rng.gen_range(-8..=8), 8))
            };
            let incoming = line_ball(z, r_in);
            check(
                legal_move(&params, &pos, &incoming).map_err(oops)? == MoveVerdict::Legal,
                "generated opponent move is illegal",
            )?;
            pos.push_unchecked(incoming);
            let (resp, _, path) = table.respond_in(&pos).map_err(oops)?;
            pos.push_unchecked(resp);
            final_path = path;
        }
        // the strategy replayed on the matched probe run gives the same
        // responses the table froze, round by round
        let (matched, _) =
            matched_prefix(sigma.as_ref(), &params, &rat(0, 1), &rat(1, 1), 4096, &final_path)
                .map_err(oops)?;
        for k in 0..20 {
            if matched.balls()[2 * k + 1] != pos.balls()[2 * k + 1] {
                return Err(format!(
                    "seed {} round {}: table reply differs from the strategy on the matched run",
                    seed, k
                ));
            }
        }
    }
    Ok("two half cells exact; 100 matched runs of 20 rounds agree".into())
}

/// Stability slack: exactly 0 on tangent responses, rho(1 - alpha) - d
/// otherwise, over 1000 seeded one-ball positions; oversized non-tangent
/// probes are refused.
fn c07_slack_and_probes() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let mut tangents = 0usize;
    for i in 0..1000 {
        let alpha = rat(rng.gen_range(1..4), 4);
        let beta = rat(rng.gen_range(1..4), 4);
        let rho = rat(rng.gen_range(1..=8), rng.gen_range(1..=4));
        let params = GameParams::schmidt(alpha.clone(), beta, Some(rho.clone())).map_err(oops)?;
        let c = rat(rng.gen_range(-16..=16), rng.gen_range(1..=6));
        let mut pos = Position::empty();
        pos.push_unchecked(line_ball(c.clone(), rho.clone()));
        let span = &rho * &(&rat(1, 1) - &alpha);
        let k = rng.gen_range(0..=8);
        let d = &span * &rat(k, 8);
        let side = if rng.gen_bool(0.5) { d.clone() } else { -&d };
        let resp = line_ball(&c + &side, &alpha * &rho);
        let slack = stability_radius_from_slack(&params, &pos, &resp).map_err(oops)?;
        let want = &span - &d;
        if slack != want {
            return Err(format!("draw {}: slack {} wants {}", i, slack, want));
        }
        if k == 8 {
            check(slack == rat(0, 1), "tangent response slack is not 0")?;
            tangents += 1;
        }
    }
    check(tangents > 50, "too few tangent draws to trust the zero case")?;

    let nt = GameParams::non_tangent(rat(1, 2), rat(1, 2), Some(rat(1, 1))).map_err(oops)?;
    let sigma = concentric(nt.clone());
    let mut rejected = 0usize;
    for _ in 0..50 {
        let c = rat(rng.gen_range(-4..=4), 8);
        // concentric slack at any probe center is 1/2 here
        let over = &rat(1, 2) + &rat(1, rng.gen_range(2..=8));
        let probe = [line_ball(c.clone(), over)];
        match simplify_non_tangent(&sigma, &nt, &Position::empty(), &probe) {
            Err(ReduceError::ProbeExceedsSlack { .. }) => rejected += 1,
            other => return Err(format!("oversized probe not refused: {:?}", other)),
        }
        let fits = [line_ball(c, rat(1, 2))];
        simplify_non_tangent(&sigma, &nt, &Position::empty(), &fits)
            .map_err(|e| format!("exact-slack probe refused: {}", e))?;
    }
    Ok(format!(
        "1000 slacks exact ({} tangent zeros), {} oversized probes refused",
        tangents, rejected
    ))
}

/// Depth-6 index-game strategy through the real-game bridge: recorded
/// indices pick the cell holding the opponent's center, and each next real
/// ball is the table's response at that index, for 100 seeded opponents.
fn c08_index_bridge() -> Result<String, String> {
    let params = GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 1))).map_err(oops)?;
    let rf = gstar_to_real_i(half_split_sigma(6));
    for seed in 0..100u64 {
        let ii = random_rule_following(params.clone(), SpaceKind::Line, seed);
        let mut pos = Position::empty();
        for _ in 0..6 {
            let mine = rf.next(&pos).map_err(oops)?;
            pos.push_checked(&params, mine).map_err(oops)?;
            let theirs = ii.next(&pos).map_err(oops)?;
            pos.push_checked(&params, theirs).map_err(oops)?;
        }
        let reply = rf.next(&pos).map_err(oops)?;
        pos.push_checked(&params, reply).map_err(oops)?;
        let path = rf.align(&pos.prefix(12)).map_err(oops)?;
        check(path.len() == 6, "alignment did not see six rounds")?;
        let balls = pos.balls();
        for k in 0..6 {
            let table = rf
                .sigma()
                .table_at(&path[..k])
                .ok_or_else(|| format!("seed {}: no table at depth {}", seed, k))?;
            check(table.cells.len() == 2, "tables must have two cells")?;
            let (atom, resp) = &table.cells[path[k]];
            check(
                atom.contains(&balls[2 * k + 1].center).map_err(oops)?,
                "opponent center is outside its recorded cell",
            )?;
            let ResponseTemplate::Absolute(forced) = resp else {
                return Err("table response is not absolute".into());
            };
            if &balls[2 * k + 2] != forced {
                return Err(format!(
                    "seed {} round {}: real ball is not the table response",
                    seed, k
                ));
            }
        }
    }
    Ok("100 runs align: membership and forced responses exact".into())
}

/// Sequence-space bridge: ball-to-stem round-trip on 1000 seeded stems up
/// to length 20, and every legal half-shrink move extends the stem by
/// exactly one coordinate.
fn c09_stem_round_trip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    for i in 0..1000 {
        let len = rng.gen_range(0..=20);
        let stem: Vec<i64> = (0..len).map(|_| rng.gen_range(-50..50)).collect();
        let sb = StemBall { stem };
        match baire_reduce(&baire_unreduce(&sb)) {
            Ok(back) if back == sb => {}
            other => return Err(format!("stem {} did not round-trip: {:?}", i, other)),
        }
    }
    let params = GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 2))).map_err(oops)?;
    let mut extensions = 0usize;
    for run in 0..50u64 {
        let mover = random_rule_following(params.clone(), SpaceKind::Baire, run);
        let mut pos = Position::empty();
        for _ in 0..10 {
            let ball = mover.next(&pos).map_err(oops)?;
            check(
                legal_move(&params, &pos, &ball).map_err(oops)? == MoveVerdict::Legal,
                "generated move is illegal",
            )?;
            if let Some(prev) = pos.last() {
                let before = baire_reduce(prev).map_err(oops)?;
                let after = baire_reduce(&ball).map_err(oops)?;
                if after.stem.len() != before.stem.len() + 1
                    || after.stem[..before.stem.len()] != before.stem[..]
                {
                    return Err(format!(
                        "run {}: move went {} -> {}, not a one-step extension",
                        run, before, after
                    ));
                }
                extensions += 1;
            }
            pos.push_unchecked(ball);
        }
    }
    Ok(format!("1000 round trips, {} one-step extensions", extensions))
}

/// The tangency boundary case: B(3/4, 1/4) after B(0, 1) at alpha = 1/4 is
/// legal under the plain rules and refused as tangent under the strict ones.
fn c10_tangency_flip() -> Result<String, String> {
    let mut pos = Position::empty();
    pos.push_unchecked(line_ball(rat(0, 1), rat(1, 1)));
    let mv = line_ball(rat(3, 4), rat(1, 4));
    let plain = GameParams::schmidt(rat(1, 4), rat(1, 2), Some(rat(1, 1))).map_err(oops)?;
    let strict = GameParams::non_tangent(rat(1, 4), rat(1, 2), Some(rat(1, 1))).map_err(oops)?;
    check(
        legal_move(&plain, &pos, &mv).map_err(oops)? == MoveVerdict::Legal,
        "tangent move refused under plain rules",
    )?;
    check(
        legal_move(&strict, &pos, &mv).map_err(oops)? == MoveVerdict::IllegalTangent,
        "tangent move not flagged under strict rules",
    )?;
    Ok("legal in the plain game, IllegalTangent in the strict one".into())
}

#[test]
fn acceptance_gate() {
    let criteria: [(&str, u64, fn() -> Result<String, String>); 10] = [
        ("c01 ray escape", 1, c01_ray_escape),
        ("c02 rational avoidance", 5, c02_rational_avoidance),
        ("c03 duel closed form", 5, c03_duel_closed_form),
        ("c04 uniformization", 1, c04_uniformization),
        ("c05 transfer fidelity", 30, c05_transfer_fidelity),
        ("c06 simplification", 10, c06_simplification),
        ("c07 slack and probes", 10, c07_slack_and_probes),
        ("c08 index bridge", 10, c08_index_bridge),
        ("c09 stem round trip", 5, c09_stem_round_trip),
        ("c10 tangency flip", 1, c10_tangency_flip),
    ];
    let mut failures = Vec::new();
    for (name, budget_s, f) in criteria {
        let budget = Duration::from_secs(budget_s);
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panicked: {}", msg))
        });
        let took = start.elapsed();
        match verdict {
            Ok(detail) if took <= budget => {
                println!("pass {} [{:.2?} of {:?}]: {}", name, took, budget, detail);
            }
            Ok(detail) => {
                println!(
                    "FAIL {} [over budget: {:.2?} of {:?}]: {}",
                    name, took, budget, detail
                );
                failures.push(name);
            }
            Err(detail) => {
                println!("FAIL {} [{:.2?}]: {}", name, took, detail);
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "criteria failed: {:?}", failures);
}
