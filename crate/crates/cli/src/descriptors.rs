//! Strategy descriptors: the small grammar behind --I and --II.
//!
//!   concentric            shrink in place
//!   tangent:left          tangent play along the first axis (also right)
//!   tangent:vec:1,2       tangent play along a rational direction
//!   maxdist:0             maximize distance from a point (bare or bracketed)
//!   maxdist:axis          maximize distance from the x-axis
//!   avoid:a,b             enumeration avoidance over the open interval (a,b)
//!   random:17             seeded rule-following play (default seed if omitted)
//!   responder:file        relation-table responder read from a file

use std::fs;

use schmidt_games::cylinder::{responder_strategy, RelationTable};
use schmidt_games::engine::GameParams;
use schmidt_games::space::SpaceKind;
use schmidt_games::strategy::{
    avoid_enumeration, concentric, maximize_distance_from, random_rule_following, tangent_toward,
    Anchor, Direction, Strategy,
};

use crate::settings::{parse_err, parse_point, parse_rat, CliError};

pub fn build_strategy(
    desc: &str,
    field: &str,
    params: &GameParams,
    space: SpaceKind,
    default_seed: u64,
) -> Result<Box<dyn Strategy>, CliError> {
    let desc = desc.trim();
    if desc == "concentric" {
        return Ok(Box::new(concentric(params.clone())));
    }
    if desc == "random" {
        return Ok(Box::new(random_rule_following(params.clone(), space, default_seed)));
    }
    if let Some(rest) = desc.strip_prefix("random:") {
        let seed: u64 = rest
            .trim()
            .parse()
            .map_err(|_| parse_err(field, format!("bad seed {:?}", rest)))?;
        return Ok(Box::new(random_rule_following(params.clone(), space, seed)));
    }
    if let Some(rest) = desc.strip_prefix("tangent:") {
        let dir = match rest.trim() {
            "left" => Direction::Left,
            "right" => Direction::Right,
            other => match other.strip_prefix("vec:") {
                Some(coords) => {
                    let v = coords
                        .split(',')
                        .map(|c| parse_rat(c, field))
                        .collect::<Result<Vec<_>, _>>()?;
                    Direction::vector(v).map_err(|e| parse_err(field, e))?
                }
                None => {
                    return Err(parse_err(
                        field,
                        format!("tangent wants left, right, or vec:..., got {:?}", other),
                    ))
                }
            },
        };
        return Ok(Box::new(tangent_toward(params.clone(), dir)));
    }
    if let Some(rest) = desc.strip_prefix("maxdist:") {
        let anchor = if rest.trim() == "axis" {
            Anchor::XAxis
        } else {
            Anchor::Point(parse_point(rest, field)?)
        };
        return Ok(Box::new(maximize_distance_from(params.clone(), anchor)));
    }
    if let Some(rest) = desc.strip_prefix("avoid:") {
        let Some((a, b)) = rest.split_once(',') else {
            return Err(parse_err(field, format!("avoid wants a,b, got {:?}", rest)));
        };
        let s = avoid_enumeration(params.clone(), parse_rat(a, field)?, parse_rat(b, field)?)
            .map_err(|e| parse_err(field, e))?;
        return Ok(Box::new(s));
    }
    if let Some(path) = desc.strip_prefix("responder:") {
        // an unreadable file is a runtime failure; only bad content is a parse error
        let text = fs::read_to_string(path.trim())
            .map_err(|e| CliError::Runtime(format!("{}: {}: {}", field, path.trim(), e)))?;
        let rel = RelationTable::parse(&text).map_err(|e| parse_err(field, e))?;
        let rho = params
            .rho
            .clone()
            .ok_or_else(|| parse_err(field, "responder needs a radius schedule (rho)"))?;
        let s = responder_strategy(&rel, &params.alpha, &params.beta, &rho)
            .map_err(|e| parse_err(field, e))?;
        return Ok(Box::new(s));
    }
    Err(parse_err(field, format!("unknown strategy {:?}", desc)))
}
