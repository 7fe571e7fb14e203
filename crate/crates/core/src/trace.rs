//! Plain-text run records.
//!
//! One header line carries the rules, one line per move, and an optional
//! final outcome line:
//!
//! ```text
//! trace v1 schmidt alpha=1/2 beta=1/2 rho=2
//! 0 I [0] 2 Legal
//! 1 II [3/2] 1/2 Legal cell=0
//! outcome WinII ball-inside [3/2] 1/2
//! ```
//!
//! Centers never contain spaces, so every line splits on whitespace; a
//! resignation reason is the tail of its line. `parse_trace(emit_trace(..))`
//! is the identity on both the parameters and the trace.

use std::fmt;
use std::str::FromStr;

use crate::engine::{
    Certificate, GameParams, MoveVerdict, Outcome, Player, Trace, TraceEntry, Variant,
};
use crate::rat::Rat;
use crate::space::{Ball, Point};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceParseError {
    pub line: usize,
    pub msg: String,
}

impl TraceParseError {
    fn at(line: usize, msg: impl Into<String>) -> TraceParseError {
        TraceParseError { line, msg: msg.into() }
    }
}

impl fmt::Display for TraceParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trace line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for TraceParseError {}

fn emit_outcome(out: &Outcome) -> String {
    let winner_cert = |winner: &str, cert: &Certificate| match cert {
        Certificate::BallInside(b) => {
            format!("outcome {} ball-inside {} {}", winner, b.center, b.radius)
        }
        Certificate::BallDisjoint(b) => {
            format!("outcome {} ball-disjoint {} {}", winner, b.center, b.radius)
        }
        Certificate::LimitPoint { point, claimed_by } => {
            format!("outcome {} limit {} by={}", winner, point, claimed_by)
        }
        Certificate::Violation { by, verdict, attempted } => format!(
            "outcome {} violation by={} {} {} {}",
            winner, by, verdict, attempted.center, attempted.radius
        ),
        Certificate::Resignation { by, reason } => {
            format!("outcome {} resignation by={} {}", winner, by, reason)
        }
    };
    match out {
        Outcome::WinI(cert) => winner_cert("WinI", cert),
        Outcome::WinII(cert) => winner_cert("WinII", cert),
        Outcome::Undecided { depth, enclosing } => match enclosing {
            Some(b) => format!(
                "outcome Undecided depth={} enclosing {} {}",
                depth, b.center, b.radius
            ),
            None => format!("outcome Undecided depth={} enclosing none", depth),
        },
    }
}

pub fn emit_trace(params: &GameParams, trace: &Trace) -> String {
    let rho = match &params.rho {
        Some(r) => r.to_string(),
        None => "free".to_string(),
    };
    let mut out = format!(
        "trace v1 {} alpha={} beta={} rho={}\n",
        params.variant, params.alpha, params.beta, rho
    );
    for e in &trace.entries {
        out.push_str(&format!(
            "{} {} {} {} {}",
            e.turn, e.player, e.ball.center, e.ball.radius, e.verdict
        ));
        if let Some(cell) = e.cell {
            out.push_str(&format!(" cell={}", cell));
        }
        out.push('\n');
    }
    if let Some(o) = &trace.outcome {
        out.push_str(&emit_outcome(o));
        out.push('\n');
    }
    out
}

fn parse_player(s: &str, line: usize) -> Result<Player, TraceParseError> {
    match s {
        "I" => Ok(Player::I),
        "II" => Ok(Player::II),
        _ => Err(TraceParseError::at(line, format!("bad player tag {:?}", s))),
    }
}

fn parse_keyed<'a>(field: &'a str, key: &str, line: usize) -> Result<&'a str, TraceParseError> {
    field
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| TraceParseError::at(line, format!("expected {}=..., got {:?}", key, field)))
}

fn parse_ball(center: &str, radius: &str, line: usize) -> Result<Ball, TraceParseError> {
    let c = Point::from_str(center).map_err(|e| TraceParseError::at(line, e.to_string()))?;
    let r = Rat::from_str(radius).map_err(|e| TraceParseError::at(line, e.to_string()))?;
    Ball::try_new(c, r).map_err(|e| TraceParseError::at(line, e.to_string()))
}

fn parse_header(line: &str) -> Result<GameParams, TraceParseError> {
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() != 6 || f[0] != "trace" || f[1] != "v1" {
        return Err(TraceParseError::at(1, "expected \"trace v1 <variant> alpha=.. beta=.. rho=..\""));
    }
    let variant = match f[2] {
        "schmidt" => Variant::Schmidt,
        "non-tangent" => Variant::NonTangentSchmidt,
        "banach-mazur" => Variant::BanachMazur,
        other => return Err(TraceParseError::at(1, format!("unknown variant {:?}", other))),
    };
    let rat_field = |field: &str, key: &str| -> Result<Rat, TraceParseError> {
        let v = parse_keyed(field, key, 1)?;
        Rat::from_str(v).map_err(|e| TraceParseError::at(1, e.to_string()))
    };
    let alpha = rat_field(f[3], "alpha")?;
    let beta = rat_field(f[4], "beta")?;
    let rho = match parse_keyed(f[5], "rho", 1)? {
        "free" => None,
        v => Some(Rat::from_str(v).map_err(|e| TraceParseError::at(1, e.to_string()))?),
    };
    GameParams::new(alpha, beta, rho, variant)
        .map_err(|e| TraceParseError::at(1, e.to_string()))
}

fn parse_outcome(fields: &[&str], raw: &str, line: usize) -> Result<Outcome, TraceParseError> {
    let bad = || TraceParseError::at(line, format!("malformed outcome line {:?}", raw));
    let winner = match *fields.first().ok_or_else(bad)? {
        "WinI" => Some(Player::I),
        "WinII" => Some(Player::II),
        "Undecided" => None,
        _ => return Err(bad()),
    };
    let Some(winner) = winner else {
        // outcome Undecided depth=N enclosing (<center> <radius> | none)
        if fields.len() < 3 || fields[2] != "enclosing" {
            return Err(bad());
        }
        let depth: usize = parse_keyed(fields[1], "depth", line)?
            .parse()
            .map_err(|_| bad())?;
        let enclosing = match &fields[3..] {
            ["none"] => None,
            [center, radius] => Some(parse_ball(center, radius, line)?),
            _ => return Err(bad()),
        };
        return Ok(Outcome::Undecided { depth, enclosing });
    };
    let cert = match *fields.get(1).ok_or_else(bad)? {
        "ball-inside" | "ball-disjoint" => {
            let [center, radius] = &fields[2..] else {
                return Err(bad());
            };
            let b = parse_ball(center, radius, line)?;
            if fields[1] == "ball-inside" {
                Certificate::BallInside(b)
            } else {
                Certificate::BallDisjoint(b)
            }
        }
        "limit" => {
            let [point, by] = &fields[2..] else {
                return Err(bad());
            };
            let point = Point::from_str(point).map_err(|e| TraceParseError::at(line, e.to_string()))?;
            let claimed_by = parse_player(parse_keyed(by, "by", line)?, line)?;
            Certificate::LimitPoint { point, claimed_by }
        }
        "violation" => {
            let [by, verdict, center, radius] = &fields[2..] else {
                return Err(bad());
            };
            let by = parse_player(parse_keyed(by, "by", line)?, line)?;
            let verdict = MoveVerdict::from_str(verdict)
                .map_err(|_| TraceParseError::at(line, format!("bad verdict {:?}", verdict)))?;
            let attempted = parse_ball(center, radius, line)?;
            Certificate::Violation { by, verdict, attempted }
        }
        "resignation" => {
            let by_field = *fields.get(2).ok_or_else(bad)?;
            let by = parse_player(parse_keyed(by_field, "by", line)?, line)?;
            // reason: everything in the raw line after the by= field, verbatim
            let idx = raw.find(by_field).ok_or_else(bad)? + by_field.len();
            let reason = raw[idx..].trim_start();
            if reason.is_empty() {
                return Err(bad());
            }
            Certificate::Resignation { by, reason: reason.to_string() }
        }
        _ => return Err(bad()),
    };
    Ok(Outcome::win_for(winner, cert))
}

pub fn parse_trace(text: &str) -> Result<(GameParams, Trace), TraceParseError> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) => break l,
            None => return Err(TraceParseError::at(1, "empty input")),
        }
    };
    let params = parse_header(header)?;
    let mut trace = Trace::new();
    for (i, raw) in lines {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "outcome" {
            if trace.outcome.is_some() {
                return Err(TraceParseError::at(line_no, "second outcome line"));
            }
            trace.outcome = Some(parse_outcome(&fields[1..], line, line_no)?);
            continue;
        }
        if trace.outcome.is_some() {
            return Err(TraceParseError::at(line_no, "move after the outcome line"));
        }
        if fields.len() < 5 || fields.len() > 6 {
            return Err(TraceParseError::at(line_no, format!("malformed move line {:?}", raw)));
        }
        let turn: usize = fields[0]
            .parse()
            .map_err(|_| TraceParseError::at(line_no, format!("bad turn {:?}", fields[0])))?;
        let player = parse_player(fields[1], line_no)?;
        if player != Player::of_turn(turn) {
            return Err(TraceParseError::at(
                line_no,
                format!("turn {} belongs to player {}", turn, Player::of_turn(turn)),
            ));
        }
        if turn != trace.entries.len() {
            return Err(TraceParseError::at(
                line_no,
                format!("expected turn {}, got {}", trace.entries.len(), turn),
            ));
        }
        let ball = parse_ball(fields[2], fields[3], line_no)?;
        let verdict = MoveVerdict::from_str(fields[4])
            .map_err(|_| TraceParseError::at(line_no, format!("bad verdict {:?}", fields[4])))?;
        let cell = match fields.get(5) {
            None => None,
            Some(f) => Some(
                parse_keyed(f, "cell", line_no)?
                    .parse::<usize>()
                    .map_err(|_| TraceParseError::at(line_no, format!("bad cell index {:?}", f)))?,
            ),
        };
        trace.entries.push(TraceEntry { turn, player, ball, verdict, cell });
    }
    Ok((params, trace))
}
