//! The six subcommand bodies. Each resolves its settings, delegates to the
//! engine crate, prints a report, and returns the process exit code:
//! 0 for a certified result, 3 for an undecided run, anything else via
//! CliError (2 parse, 1 runtime).

use std::collections::BTreeMap;
use std::fs;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schmidt_games::cylinder::{
    critical_radius, extract_uniformization, greedy_duel, responder_strategy, RationalAngle,
    RelationTable,
};
use schmidt_games::engine::{play, GameParams, Outcome, Player};
use schmidt_games::rat::{rat, Rat};
use schmidt_games::reductions::{build_gstar, half_split_sigma, simplify_on_line, GStarMove};
use schmidt_games::simple::SimpleStrategy;
use schmidt_games::space::{Ball, SpaceKind};
use schmidt_games::strategy::{random_rule_following, Strategy, WithFirstMove};
use schmidt_games::target::{parse_space, parse_target, CylinderContext};
use schmidt_games::trace::emit_trace;
use schmidt_games::transfer::{
    pick_rho_prime, rho_prime_bounds, transfer_ii, DenseEnum, TransferParams,
};
use schmidt_games::verify;

use crate::descriptors::build_strategy;
use crate::settings::{parse_err, parse_point, parse_variant, build_params, CliError, Settings};
use crate::{CylinderArgs, GstarArgs, PlayArgs, SimplifyArgs, TransferArgs, VerifyArgs};

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn write_or_print(path: Option<&str>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| runtime(format!("{}: {}", p, e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn exit_for(outcome: &Outcome) -> i32 {
    match outcome.winner() {
        Some(_) => 0,
        None => 3,
    }
}

pub fn play_cmd(args: &PlayArgs, cfg: &Settings) -> Result<i32, CliError> {
    let variant = parse_variant(&cfg.str_or(&args.variant, "variant", "schmidt"))?;
    let alpha = cfg.rat_opt(&args.alpha, "alpha")?;
    let beta = cfg.rat_opt(&args.beta, "beta")?;
    let rho = cfg.rat_opt(&args.rho, "rho")?;
    let params = build_params(variant, alpha, beta, rho)?;
    let space = parse_space(&cfg.str_or(&args.space, "space", "line"))
        .map_err(|e| parse_err("space", e))?;
    let depth = cfg.usize_or(&args.depth, "depth", 12)?;
    let seed = cfg.u64_or(&args.seed, "seed", 0)?;

    let ctx = params.rho.as_ref().map(|r| CylinderContext {
        alpha: params.alpha.clone(),
        beta: params.beta.clone(),
        rho: r.clone(),
    });
    let target_spec = cfg.need(&args.target, "target")?;
    let target =
        parse_target(&target_spec, ctx.as_ref()).map_err(|e| CliError::Parse(e.to_string()))?;

    let desc_i = cfg.str_or(&args.i, "I", "random");
    let desc_ii = cfg.str_or(&args.ii, "II", "random");
    let mut strat_i = build_strategy(&desc_i, "I", &params, space, seed)?;
    let strat_ii = build_strategy(&desc_ii, "II", &params, space, seed.wrapping_add(1))?;

    if let Some(center) = cfg.resolve(&args.first_center, "first-center") {
        let c = parse_point(&center, "first-center")?;
        let r = match cfg.rat_opt(&args.first_radius, "first-radius")? {
            Some(r) => r,
            None => params
                .rho
                .clone()
                .ok_or_else(|| parse_err("first-radius", "required when rho is free"))?,
        };
        let ball = Ball::try_new(c, r).map_err(|e| parse_err("first-center", e))?;
        strat_i = Box::new(WithFirstMove { first: ball, inner: strat_i });
    }

    let (trace, outcome) = play(&params, strat_i.as_ref(), strat_ii.as_ref(), target.as_ref(), 2 * depth)
        .map_err(runtime)?;
    let text = emit_trace(&params, &trace);
    write_or_print(args.trace_out.as_deref(), &text)?;
    if args.trace_out.is_some() {
        // still tell the terminal how it ended
        if let Some(o) = &trace.outcome {
            println!("{:?}", o);
        }
    }
    Ok(exit_for(&outcome))
}

pub fn transfer_cmd(args: &TransferArgs, cfg: &Settings) -> Result<i32, CliError> {
    let alpha = cfg.rat(&args.alpha, "alpha")?;
    let beta = cfg.rat(&args.beta, "beta")?;
    let alpha_p = cfg.rat(&args.alpha_prime, "alpha-prime")?;
    let beta_p = cfg.rat(&args.beta_prime, "beta-prime")?;
    let rho = cfg.rat(&args.rho, "rho")?;
    let rounds = cfg.usize_or(&args.rounds, "rounds", 8)?;
    let seed = cfg.u64_or(&args.seed, "seed", 0)?;
    let dense = match cfg.str_or(&args.dense, "dense", "rationals").as_str() {
        "rationals" => DenseEnum::Rationals,
        "dyadics" => DenseEnum::Dyadics,
        other => return Err(parse_err("dense", format!("unknown set {:?}", other))),
    };

    let (lo, hi) = rho_prime_bounds(&alpha, &beta, &alpha_p, &beta_p, &rho).map_err(runtime)?;
    println!("window ({}, {})", lo, hi);
    let rho_p = match cfg.rat_opt(&args.rho_prime, "rho-prime")? {
        Some(r) => r,
        None => pick_rho_prime(&lo, &hi, &alpha, &beta)
            .ok_or_else(|| runtime("no rational radius inside the window"))?,
    };
    println!("rho' = {}", rho_p);

    let params = TransferParams::new(alpha, beta, alpha_p, beta_p, rho, rho_p, dense)
        .map_err(runtime)?;
    for n in 0..4 {
        println!("eps_II[{}] = {}  eps_I[{}] = {}", n, params.epsilon_ii(n), n, params.epsilon_i(n));
    }

    if rounds == 0 {
        return Ok(0);
    }
    let real = params.unprimed_game();
    let primed = params.primed_game();
    let tau_desc = cfg.str_or(&args.tau, "tau", "concentric");
    let tau: Rc<dyn Strategy> = Rc::from(build_strategy(
        &tau_desc,
        "tau",
        &primed,
        SpaceKind::Line,
        seed.wrapping_add(1),
    )?);
    let ii = transfer_ii(tau, params);
    let mover = random_rule_following(real.clone(), SpaceKind::Line, seed);
    let mut pos = schmidt_games::engine::Position::empty();
    for _ in 0..rounds {
        let mine = mover.next(&pos).map_err(runtime)?;
        pos.push_checked(&real, mine).map_err(runtime)?;
        let reply = ii.next(&pos).map_err(runtime)?;
        pos.push_checked(&real, reply).map_err(runtime)?;
    }
    // the shadow is defined where II is to move: stop at the last I ball
    let shadow = ii.shadow_position(&pos.prefix(2 * rounds - 1)).map_err(runtime)?;
    println!("real run:");
    for b in pos.balls() {
        println!("  {} {}", b.center, b.radius);
    }
    println!("shadow run:");
    for b in shadow.balls() {
        println!("  {} {}", b.center, b.radius);
    }
    Ok(0)
}

pub fn simplify_cmd(args: &SimplifyArgs, cfg: &Settings) -> Result<i32, CliError> {
    let alpha = cfg.rat(&args.alpha, "alpha")?;
    let beta = cfg.rat(&args.beta, "beta")?;
    let rho = cfg.rat(&args.rho, "rho")?;
    let params = GameParams::schmidt(alpha, beta, Some(rho.clone()))
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let lo = cfg
        .rat_opt(&args.lo, "lo")?
        .unwrap_or_else(|| rat(0, 1));
    let hi = cfg
        .rat_opt(&args.hi, "hi")?
        .unwrap_or_else(|| rat(1, 1));
    let max_cells = cfg.usize_or(&args.max_cells, "max-cells", 256)?;
    let seed = cfg.u64_or(&args.seed, "seed", 0)?;
    let desc = cfg.str_or(&args.strategy, "strategy", "concentric");
    let strat = build_strategy(&desc, "strategy", &params, SpaceKind::Line, seed)?;

    let out = simplify_on_line(
        strat.as_ref(),
        &params,
        &schmidt_games::engine::Position::empty(),
        &lo,
        &hi,
        max_cells,
    )
    .map_err(runtime)?;

    if out.complete {
        println!("# {} cells cover [{}, {}) completely", out.oneround.cells.len(), lo, hi);
    } else {
        println!("# budget exhausted at {} (partial cover)", out.covered_to);
    }
    for issue in &out.issues {
        println!("# issue: {}", issue);
    }

    let mut rounds = BTreeMap::new();
    rounds.insert(Vec::new(), out.oneround.clone());
    let doc = SimpleStrategy::for_ii(SpaceKind::Line, rounds);
    let text = schmidt_games::simple::emit_simple(&doc).map_err(runtime)?;
    write_or_print(args.out.as_deref(), &text)?;
    Ok(if out.issues.is_empty() && out.complete { 0 } else { 1 })
}

fn parse_angle(cos: &Rat, sin: &Rat) -> Result<RationalAngle, CliError> {
    RationalAngle::new(cos.clone(), sin.clone()).map_err(|e| parse_err("cos/sin", e))
}

pub fn cylinder_cmd(args: &CylinderArgs, cfg: &Settings) -> Result<i32, CliError> {
    let alpha = cfg.rat(&args.alpha, "alpha")?;
    let beta = cfg.rat(&args.beta, "beta")?;
    let rho = cfg.rat(&args.rho, "rho")?;
    let r = critical_radius(&alpha, &beta, &rho);
    match args.mode.as_str() {
        "duel" => {
            let depth = cfg.usize_or(&args.depth, "depth", 2)?;
            let x = cfg.rat_opt(&args.x, "x")?.unwrap_or_else(|| rat(0, 1));
            let cos = cfg.rat_opt(&args.cos, "cos")?.unwrap_or_else(|| rat(1, 1));
            let sin = cfg.rat_opt(&args.sin, "sin")?.unwrap_or_else(|| rat(0, 1));
            let angle = parse_angle(&cos, &sin)?;
            println!("critical radius = {}", r);
            let dists = greedy_duel(&alpha, &beta, &rho, &x, &angle, depth).map_err(runtime)?;
            for (i, d) in dists.iter().enumerate() {
                let who = if i % 2 == 0 { Player::II } else { Player::I };
                println!("move {} ({}): axis distance {}", i + 1, who, d);
            }
            Ok(0)
        }
        "extract" | "verify" => {
            let path = cfg.need(&args.table, "table")?;
            let text =
                fs::read_to_string(&path).map_err(|e| runtime(format!("{}: {}", path, e)))?;
            let rel = RelationTable::parse(&text).map_err(runtime)?;
            let tau = responder_strategy(&rel, &alpha, &beta, &rho).map_err(runtime)?;
            let extracted = extract_uniformization(&tau, &rel.domain(), &alpha, &rho);
            let mut bad = 0usize;
            for (x, res) in &extracted {
                match res {
                    Ok(angle) => println!("{} {} {}", x, angle.cos, angle.sin),
                    Err(nc) => {
                        bad += 1;
                        println!("{} nonconforming: {}", x, nc);
                    }
                }
            }
            if args.mode == "extract" {
                return Ok(if bad == 0 { 0 } else { 1 });
            }
            // verify mode: audit the extraction against the table
            let mut failures = bad;
            for (x, res) in &extracted {
                let Ok(angle) = res else { continue };
                if !rel.contains(x, angle) {
                    failures += 1;
                    println!("FAIL {}: extracted angle is not a table row", x);
                    continue;
                }
                let options = rel.angles_for(x);
                if options.len() == 1 && *options[0] != *angle {
                    failures += 1;
                    println!("FAIL {}: single-valued row not honored", x);
                }
            }
            println!(
                "{}: {} of {} rows conform",
                if failures == 0 { "pass" } else { "FAIL" },
                extracted.len() - failures,
                extracted.len()
            );
            Ok(if failures == 0 { 0 } else { 1 })
        }
        other => Err(parse_err("mode", format!("unknown mode {:?} (duel | extract | verify)", other))),
    }
}

pub fn gstar_cmd(args: &GstarArgs, cfg: &Settings) -> Result<i32, CliError> {
    let depth = cfg.usize_or(&args.depth, "depth", 6)?;
    let rounds = cfg.usize_or(&args.rounds, "rounds", 4)?;
    let seed = cfg.u64_or(&args.seed, "seed", 0)?;
    let target_spec = cfg.str_or(&args.target, "target", "all:line");
    let target =
        parse_target(&target_spec, None).map_err(|e| CliError::Parse(e.to_string()))?;
    let params = GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 1)))
        .expect("fixed index-game parameters");
    let game = build_gstar(params, target.as_ref()).map_err(runtime)?;
    let sigma = half_split_sigma(depth);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = game.start();
    let mut path: Vec<usize> = Vec::new();
    let mut ball = sigma.first.clone();
    for _ in 0..rounds.min(depth) {
        let Some(table) = sigma.table_at(&path) else { break };
        let cells = table.cells.len();
        println!("I: pair {} {} with {} cells", ball.center, ball.radius, cells);
        game.push(&mut st, GStarMove::Pair { ball: ball.clone(), table: table.clone() })
            .map_err(runtime)?;
        let n = rng.gen_range(0..cells);
        println!("II: index {}", n);
        game.push(&mut st, GStarMove::Index { n, witness: None }).map_err(runtime)?;
        let resp = match &table.cells[n].1 {
            schmidt_games::simple::ResponseTemplate::Absolute(b) => b.clone(),
            _ => return Err(runtime("index tables must carry absolute responses")),
        };
        path.push(n);
        ball = resp;
    }
    println!("real run:");
    for b in st.real().balls() {
        println!("  {} {}", b.center, b.radius);
    }
    match game.certificate(&st) {
        Some((player, ball)) => {
            println!("certificate: {} via ball {} {}", player, ball.center, ball.radius);
            Ok(0)
        }
        None => {
            println!("no certificate at this depth");
            Ok(3)
        }
    }
}

pub fn verify_cmd(args: &VerifyArgs, cfg: &Settings) -> Result<i32, CliError> {
    let seed = cfg.u64_or(&args.seed, "seed", 0)?;
    let results = verify::run_all(seed);
    let mut failed = 0usize;
    for r in &results {
        println!("{}", r);
        if !r.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("all {} suites pass at seed {}", results.len(), seed);
        Ok(0)
    } else {
        println!("{} of {} suites failed at seed {}", failed, results.len(), seed);
        Ok(1)
    }
}
