//! Cylinder coding of a plane relation into an R^3 target set.
//!
//! A finite relation R between line points x and unit-circle directions theta
//! is coded as the target
//!   T = { (x, r cos t, r sin t) : (x, t) in R }  union  { y^2 + z^2 > r^2 },
//! where r is the critical radius of alternating tangent play. Player II can
//! then steer the intersection point onto the coded circle exactly when the
//! relation offers an angle at I's chosen x, and the first response of any
//! winning II strategy reveals such an angle, uniformizing the relation.
//!
//! All geometry is exact: angles are rational points on the unit circle and
//! every certificate comparison is made through squared quantities.

use std::fmt;

use crate::engine::{scheduled_radius, GameParams, Position};
use crate::rat::Rat;
use crate::space::{dist_sq, Ball, Point, SpaceError, SpaceKind};
use crate::strategy::{maximize_distance_from, Anchor, Strategy, StrategyError};
use crate::target::{BallAnswer, Membership, TargetSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalAngle {
    pub cos: Rat,
    pub sin: Rat,
}

impl RationalAngle {
    pub fn new(cos: Rat, sin: Rat) -> Result<RationalAngle, CylinderError> {
        if cos.square() + sin.square() != Rat::one() {
            return Err(CylinderError::BadAngle { cos, sin });
        }
        Ok(RationalAngle { cos, sin })
    }

    /// Unit direction (0, cos, sin) in R^3 scaled by `scale`.
    pub fn offset3(&self, scale: &Rat) -> Vec<Rat> {
        vec![Rat::zero(), &self.cos * scale, &self.sin * scale]
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.cos, self.sin)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CylinderError {
    BadAngle { cos: Rat, sin: Rat },
    DegenerateRadius { r: Rat },
    Parse { line: usize, msg: String },
}

impl fmt::Display for CylinderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CylinderError::BadAngle { cos, sin } => {
                write!(f, "({}, {}) is not on the unit circle", cos, sin)
            }
            CylinderError::DegenerateRadius { r } => {
                write!(f, "critical radius {} is not positive; coding degenerates", r)
            }
            CylinderError::Parse { line, msg } => write!(f, "line {}: {}", line, msg),
        }
    }
}

impl std::error::Error for CylinderError {}

/// Finite relation: rows (x, angle). An x may carry several rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelationTable {
    rows: Vec<(Rat, RationalAngle)>,
}

impl RelationTable {
    pub fn new(rows: Vec<(Rat, RationalAngle)>) -> RelationTable {
        RelationTable { rows }
    }

    pub fn rows(&self) -> &[(Rat, RationalAngle)] {
        &self.rows
    }

    /// Distinct x values in first-appearance order.
    pub fn domain(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = Vec::new();
        for (x, _) in &self.rows {
            if !out.contains(x) {
                out.push(x.clone());
            }
        }
        out
    }

    pub fn angles_for(&self, x: &Rat) -> Vec<&RationalAngle> {
        self.rows.iter().filter(|(rx, _)| rx == x).map(|(_, a)| a).collect()
    }

    pub fn contains(&self, x: &Rat, angle: &RationalAngle) -> bool {
        self.rows.iter().any(|(rx, ra)| rx == x && ra == angle)
    }

    /// One row per line: "x cos sin" as exact rationals; '#' starts a comment.
    pub fn parse(text: &str) -> Result<RelationTable, CylinderError> {
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(CylinderError::Parse {
                    line: i + 1,
                    msg: format!("expected \"x cos sin\", got {:?}", raw.trim()),
                });
            }
            let parse = |s: &str| {
                s.parse::<Rat>().map_err(|e| CylinderError::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })
            };
            let x = parse(fields[0])?;
            let angle = RationalAngle::new(parse(fields[1])?, parse(fields[2])?)?;
            rows.push((x, angle));
        }
        Ok(RelationTable { rows })
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        for (x, a) in &self.rows {
            out.push_str(&format!("{} {} {}\n", x, a.cos, a.sin));
        }
        out
    }
}

/// Limiting axis distance of alternating tangent play:
/// rho(1 - 2 alpha + alpha beta) / (1 - alpha beta).
pub fn critical_radius(alpha: &Rat, beta: &Rat, rho: &Rat) -> Rat {
    let ab = alpha * beta;
    rho * (Rat::one() - alpha - alpha + &ab) / (Rat::one() - &ab)
}

fn euclid3(p: &Point) -> Result<&[Rat], SpaceError> {
    match p {
        Point::Euclid(v) if v.len() == 3 => Ok(v),
        _ => Err(SpaceError::MixedSpaces),
    }
}

/// The coded target set. All three queries are exact; no Unknown answers.
pub struct CylinderTarget {
    rel: RelationTable,
    r: Rat,
}

impl CylinderTarget {
    pub fn radius(&self) -> &Rat {
        &self.r
    }

    /// The finitely many coded surface points (x, r cos t, r sin t).
    fn coded_points(&self) -> impl Iterator<Item = Point> + '_ {
        self.rel.rows.iter().map(|(x, a)| {
            Point::Euclid(vec![x.clone(), &a.cos * &self.r, &a.sin * &self.r])
        })
    }
}

pub fn build_target(
    rel: &RelationTable,
    alpha: &Rat,
    beta: &Rat,
    rho: &Rat,
) -> Result<CylinderTarget, CylinderError> {
    let r = critical_radius(alpha, beta, rho);
    if !r.is_positive() {
        return Err(CylinderError::DegenerateRadius { r });
    }
    Ok(CylinderTarget { rel: rel.clone(), r })
}

impl TargetSet for CylinderTarget {
    fn space(&self) -> SpaceKind {
        SpaceKind::Euclid(3)
    }

    fn point_query(&self, p: &Point) -> Result<Membership, SpaceError> {
        let v = euclid3(p)?;
        let axis_sq = v[1].square() + v[2].square();
        let r_sq = self.r.square();
        if axis_sq > r_sq {
            return Ok(Membership::In);
        }
        if axis_sq == r_sq {
            let coded = self
                .rel
                .rows
                .iter()
                .any(|(x, a)| *x == v[0] && &a.cos * &self.r == v[1] && &a.sin * &self.r == v[2]);
            if coded {
                return Ok(Membership::In);
            }
        }
        Ok(Membership::Out)
    }

    fn ball_inside(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let c = euclid3(&b.center)?;
        let axis_sq = c[1].square() + c[2].square();
        let reach = &self.r + &b.radius;
        // strictly outside the closed cylinder: min axis distance > r
        if axis_sq > reach.square() {
            return Ok(BallAnswer::Yes);
        }
        if axis_sq == reach.square() {
            // tangent from outside; the unique innermost point is rational here
            let f = &self.r / &reach;
            let touch = Point::Euclid(vec![c[0].clone(), &c[1] * &f, &c[2] * &f]);
            return Ok(if self.point_query(&touch)? == Membership::In {
                BallAnswer::Yes
            } else {
                BallAnswer::No
            });
        }
        // the ball meets the open cylinder interior on an open set, which
        // contains uncoded points
        Ok(BallAnswer::No)
    }

    fn ball_disjoint(&self, b: &Ball) -> Result<BallAnswer, SpaceError> {
        let c = euclid3(&b.center)?;
        let axis_sq = c[1].square() + c[2].square();
        let margin = &self.r - &b.radius;
        // any point at axis distance > r is in the target
        if margin.is_negative() || axis_sq > margin.square() {
            return Ok(BallAnswer::No);
        }
        // ball stays in the closed cylinder; only coded points remain
        for p in self.coded_points() {
            if dist_sq(&b.center, &p)? <= b.radius.square() {
                return Ok(BallAnswer::No);
            }
        }
        Ok(BallAnswer::Yes)
    }
}

/// II's strategy: if I opened on the axis at a table x with the scheduled
/// first radius, play tangent toward that row's direction forever; otherwise
/// maximize distance from the axis.
pub struct Responder {
    params: GameParams,
    rel: RelationTable,
}

pub fn responder_strategy(
    rel: &RelationTable,
    alpha: &Rat,
    beta: &Rat,
    rho: &Rat,
) -> Result<Responder, StrategyError> {
    let params = GameParams::schmidt(alpha.clone(), beta.clone(), Some(rho.clone()))
        .map_err(|e| StrategyError::new(e.to_string()))?;
    Ok(Responder { params, rel: rel.clone() })
}

impl Responder {
    /// The coded direction this position commits to, if its first ball was an
    /// on-axis table opening with the right radius.
    fn committed_angle(&self, pos: &Position) -> Option<RationalAngle> {
        let first = pos.balls().first()?;
        let Point::Euclid(v) = &first.center else {
            return None;
        };
        if v.len() != 3 || !v[1].is_zero() || !v[2].is_zero() {
            return None;
        }
        if Some(&first.radius) != self.params.rho.as_ref() {
            return None;
        }
        self.rel.angles_for(&v[0]).first().map(|a| (*a).clone())
    }
}

impl Strategy for Responder {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        let prev = pos
            .last()
            .ok_or_else(|| StrategyError::new("responder moves second"))?;
        match self.committed_angle(pos) {
            Some(angle) => {
                let r_new = scheduled_radius(&self.params, pos)
                    .ok_or_else(|| StrategyError::new("no scheduled radius"))?;
                let slack = &prev.radius - &r_new;
                let center = prev
                    .center
                    .translate(&angle.offset3(&slack))
                    .map_err(|e| StrategyError::new(e.to_string()))?;
                Ok(Ball::new(center, r_new))
            }
            None => maximize_distance_from(self.params.clone(), Anchor::XAxis).next(pos),
        }
    }

    fn stability_radius(&self, _pos: &Position) -> Option<Rat> {
        Some(Rat::zero())
    }
}

/// Axis distance of a point known to lie on the ray through (0,cos,sin):
/// the signed ray coordinate, asserted consistent.
fn ray_coordinate(v: &[Rat], angle: &RationalAngle) -> Rat {
    let t = &v[1] * &angle.cos + &v[2] * &angle.sin;
    debug_assert_eq!(&v[1], &(&t * &angle.cos));
    debug_assert_eq!(&v[2], &(&t * &angle.sin));
    t
}

/// II tangent-out / I tangent-in from B((x,0,0), rho) for N full rounds.
/// Returns the axis distance after each of the 2N moves; after round k the
/// distance is exactly critical_radius * (1 - (alpha beta)^k).
pub fn greedy_duel(
    alpha: &Rat,
    beta: &Rat,
    rho: &Rat,
    x: &Rat,
    angle: &RationalAngle,
    rounds: usize,
) -> Result<Vec<Rat>, StrategyError> {
    let params = GameParams::schmidt(alpha.clone(), beta.clone(), Some(rho.clone()))
        .map_err(|e| StrategyError::new(e.to_string()))?;
    let mut pos = Position::empty();
    pos.push_unchecked(Ball::new(
        Point::Euclid(vec![x.clone(), Rat::zero(), Rat::zero()]),
        rho.clone(),
    ));
    let mut dists = Vec::with_capacity(2 * rounds);
    for mv in 0..2 * rounds {
        let outward = mv % 2 == 0; // II moves first
        let prev = pos.last().expect("nonempty").clone();
        let r_new = scheduled_radius(&params, &pos).expect("schmidt schedule");
        let slack = &prev.radius - &r_new;
        let step = if outward { slack } else { -&slack };
        let center = prev
            .center
            .translate(&angle.offset3(&step))
            .map_err(|e| StrategyError::new(e.to_string()))?;
        let ball = Ball::new(center, r_new);
        pos.push_checked(&params, ball)
            .map_err(|e| StrategyError::new(e.to_string()))?;
        let Point::Euclid(v) = &pos.last().expect("nonempty").center else {
            unreachable!()
        };
        dists.push(ray_coordinate(v, angle));
    }
    Ok(dists)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonConforming {
    pub x: Rat,
    pub response: Option<Ball>,
    pub why: String,
}

impl fmt::Display for NonConforming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.response {
            Some(b) => write!(
                f,
                "x={}: response {} {} does not fit the coded pattern: {}",
                self.x, b.center, b.radius, self.why
            ),
            None => write!(f, "x={}: {}", self.x, self.why),
        }
    }
}

/// Reads the angle a II strategy commits to at each x by matching its first
/// response against B((x, (rho - a rho) cos t, (rho - a rho) sin t), a rho).
pub fn extract_uniformization(
    tau: &dyn Strategy,
    domain: &[Rat],
    alpha: &Rat,
    rho: &Rat,
) -> Vec<(Rat, Result<RationalAngle, NonConforming>)> {
    let reach = rho - &(alpha * rho);
    let want_radius = alpha * rho;
    domain
        .iter()
        .map(|x| {
            let mut pos = Position::empty();
            pos.push_unchecked(Ball::new(
                Point::Euclid(vec![x.clone(), Rat::zero(), Rat::zero()]),
                rho.clone(),
            ));
            let verdict = match tau.next(&pos) {
                Err(e) => Err(NonConforming {
                    x: x.clone(),
                    response: None,
                    why: e.to_string(),
                }),
                Ok(b) => {
                    let fail = |why: &str, b: &Ball| NonConforming {
                        x: x.clone(),
                        response: Some(b.clone()),
                        why: why.to_string(),
                    };
                    match &b.center {
                        Point::Euclid(v) if v.len() == 3 => {
                            if b.radius != want_radius {
                                Err(fail("wrong radius", &b))
                            } else if v[0] != *x {
                                Err(fail("moved along the axis", &b))
                            } else {
                                let cos = &v[1] / &reach;
                                let sin = &v[2] / &reach;
                                RationalAngle::new(cos, sin).map_err(|_| {
                                    fail("displacement is not a unit direction", &b)
                                })
                            }
                        }
                        _ => Err(fail("response not in R^3", &b)),
                    }
                }
            };
            (x.clone(), verdict)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn angle(cn: i64, cd: i64, sn: i64, sd: i64) -> RationalAngle {
        RationalAngle::new(rat(cn, cd), rat(sn, sd)).unwrap()
    }

    fn three_row_table() -> RelationTable {
        RelationTable::new(vec![
            (rat(0, 1), angle(3, 5, 4, 5)),
            (rat(1, 1), angle(3, 5, 4, 5)),
            (rat(1, 1), angle(4, 5, 3, 5)),
        ])
    }

    #[test]
    fn angle_validation() {
        assert!(RationalAngle::new(rat(1, 2), rat(1, 2)).is_err());
        assert!(RationalAngle::new(rat(-3, 5), rat(4, 5)).is_ok());
        assert!(RationalAngle::new(rat(1, 1), rat(0, 1)).is_ok());
    }

    #[test]
    fn critical_radius_values() {
        assert_eq!(critical_radius(&rat(1, 2), &rat(1, 2), &rat(1, 1)), rat(1, 3));
        assert_eq!(critical_radius(&rat(1, 4), &rat(1, 2), &rat(7, 1)), rat(5, 1));
        // boundary 2 alpha = 1 + alpha beta: coding collapses
        assert_eq!(critical_radius(&rat(2, 3), &rat(1, 2), &rat(1, 1)), Rat::zero());
        assert!(build_target(&three_row_table(), &rat(2, 3), &rat(1, 2), &rat(1, 1)).is_err());
    }

    #[test]
    fn critical_radius_matches_simulation() {
        // oracle: 20 rounds of alternating tangent play approach r from below
        // with gap exactly r (alpha beta)^k
        let (a, b, rho) = (rat(1, 2), rat(1, 2), rat(1, 1));
        let r = critical_radius(&a, &b, &rho);
        let dists = greedy_duel(&a, &b, &rho, &rat(0, 1), &angle(3, 5, 4, 5), 20).unwrap();
        let ab = &a * &b;
        for k in 1..=20usize {
            let expect = &r * &(Rat::one() - ab.pow(k as i64));
            assert_eq!(dists[2 * k - 1], expect, "after round {}", k);
        }
    }

    #[test]
    fn duel_hand_values() {
        let dists =
            greedy_duel(&rat(1, 2), &rat(1, 2), &rat(1, 1), &rat(0, 1), &angle(1, 1, 0, 1), 2)
                .unwrap();
        assert_eq!(dists, vec![rat(1, 2), rat(1, 4), rat(3, 8), rat(5, 16)]);
        let one_round =
            greedy_duel(&rat(1, 4), &rat(1, 2), &rat(7, 1), &rat(0, 1), &angle(0, 1, 1, 1), 1)
                .unwrap();
        assert_eq!(one_round[1], rat(35, 8));
        assert!(greedy_duel(&rat(1, 2), &rat(1, 2), &rat(1, 1), &rat(0, 1), &angle(1, 1, 0, 1), 0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn target_point_queries() {
        let t = build_target(&three_row_table(), &rat(1, 2), &rat(1, 2), &rat(1, 1)).unwrap();
        assert_eq!(t.radius(), &rat(1, 3));
        let coded = Point::euclid(vec![rat(0, 1), rat(1, 5), rat(4, 15)]);
        assert_eq!(t.point_query(&coded).unwrap(), Membership::In);
        let origin = Point::euclid(vec![rat(0, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(t.point_query(&origin).unwrap(), Membership::Out);
        // on the surface circle but not coded
        let stray = Point::euclid(vec![rat(5, 1), rat(1, 5), rat(4, 15)]);
        assert_eq!(t.point_query(&stray).unwrap(), Membership::Out);
        let outside = Point::euclid(vec![rat(0, 1), rat(1, 1), rat(1, 1)]);
        assert_eq!(t.point_query(&outside).unwrap(), Membership::In);
    }

    #[test]
    fn target_ball_queries() {
        let t = build_target(&three_row_table(), &rat(1, 2), &rat(1, 2), &rat(1, 1)).unwrap();
        let far = Ball::new(Point::euclid(vec![rat(0, 1), rat(0, 1), rat(1, 1)]), rat(1, 4));
        assert_eq!(t.ball_inside(&far).unwrap(), BallAnswer::Yes);
        let straddling = Ball::new(Point::euclid(vec![rat(0, 1), rat(0, 1), rat(1, 3)]), rat(1, 4));
        assert_eq!(t.ball_inside(&straddling).unwrap(), BallAnswer::No);
        assert_eq!(t.ball_disjoint(&straddling).unwrap(), BallAnswer::No);
        // around the axis, away from every coded point
        let inner = Ball::new(Point::euclid(vec![rat(9, 1), rat(0, 1), rat(0, 1)]), rat(1, 4));
        assert_eq!(t.ball_disjoint(&inner).unwrap(), BallAnswer::Yes);
        // contains the coded point over x=0
        let near_coded = Ball::new(Point::euclid(vec![rat(0, 1), rat(1, 5), rat(4, 15)]), rat(1, 5));
        assert_eq!(t.ball_disjoint(&near_coded).unwrap(), BallAnswer::No);
    }

    #[test]
    fn tangent_outside_touch_point() {
        // ball tangent to the cylinder from outside, touching exactly at the
        // coded point (0, 1/5, 4/15): inside iff the touch point is coded
        let t = build_target(&three_row_table(), &rat(1, 2), &rat(1, 2), &rat(1, 1)).unwrap();
        // center along (3/5,4/5) at axis distance 2/3 = r + 1/3
        let c = Point::euclid(vec![rat(0, 1), rat(2, 5), rat(8, 15)]);
        let b = Ball::new(c, rat(1, 3));
        assert_eq!(t.ball_inside(&b).unwrap(), BallAnswer::Yes);
        // same ball over x=5: touch point not coded
        let c5 = Point::euclid(vec![rat(5, 1), rat(2, 5), rat(8, 15)]);
        let b5 = Ball::new(c5, rat(1, 3));
        assert_eq!(t.ball_inside(&b5).unwrap(), BallAnswer::No);
    }

    #[test]
    fn responder_first_moves() {
        let rel = RelationTable::new(vec![(rat(5, 1), angle(3, 5, 4, 5))]);
        let tau = responder_strategy(&rel, &rat(1, 2), &rat(1, 2), &rat(1, 1)).unwrap();
        let mut pos = Position::empty();
        pos.push_unchecked(Ball::new(
            Point::euclid(vec![rat(5, 1), rat(0, 1), rat(0, 1)]),
            rat(1, 1),
        ));
        let b = tau.next(&pos).unwrap();
        assert_eq!(
            b,
            Ball::new(Point::euclid(vec![rat(5, 1), rat(3, 10), rat(2, 5)]), rat(1, 2))
        );
        // off-axis opening falls back to maximizing axis distance
        let mut pos = Position::empty();
        pos.push_unchecked(Ball::new(
            Point::euclid(vec![rat(5, 1), rat(1, 10), rat(0, 1)]),
            rat(1, 1),
        ));
        let b = tau.next(&pos).unwrap();
        assert_eq!(
            b,
            Ball::new(Point::euclid(vec![rat(5, 1), rat(3, 5), rat(0, 1)]), rat(1, 2))
        );
        // x outside the table: same fallback
        let mut pos = Position::empty();
        pos.push_unchecked(Ball::new(
            Point::euclid(vec![rat(6, 1), rat(0, 1), rat(0, 1)]),
            rat(1, 1),
        ));
        let b = tau.next(&pos).unwrap();
        assert_eq!(b.radius, rat(1, 2));
        let Point::Euclid(v) = &b.center else { panic!() };
        assert!(v[1].square() + v[2].square() > Rat::zero());
    }

    #[test]
    fn extraction_round_trip() {
        let rel = three_row_table();
        let tau = responder_strategy(&rel, &rat(1, 2), &rat(1, 2), &rat(1, 1)).unwrap();
        let got = extract_uniformization(&tau, &rel.domain(), &rat(1, 2), &rat(1, 1));
        assert_eq!(got.len(), 2);
        for (x, res) in &got {
            let a = res.as_ref().expect("responder conforms");
            assert!(rel.contains(x, a), "extracted angle must satisfy the relation");
        }
        // the single-valued row is forced
        assert_eq!(got[0].1.as_ref().unwrap(), &angle(3, 5, 4, 5));
    }

    #[test]
    fn extraction_rejects_concentric() {
        let rel = three_row_table();
        let tau = crate::strategy::concentric(
            GameParams::schmidt(rat(1, 2), rat(1, 2), Some(rat(1, 1))).unwrap(),
        );
        let got = extract_uniformization(&tau, &rel.domain(), &rat(1, 2), &rat(1, 1));
        for (_, res) in &got {
            assert!(res.is_err(), "zero displacement cannot code an angle");
        }
    }

    #[test]
    fn table_parse_emit_round_trip() {
        let text = "# relation\n0 3/5 4/5\n1 3/5 4/5   # second x\n1 4/5 3/5\n\n";
        let rel = RelationTable::parse(text).unwrap();
        assert_eq!(rel, three_row_table());
        let back = RelationTable::parse(&rel.emit()).unwrap();
        assert_eq!(back, rel);
        assert!(RelationTable::parse("0 1/2 1/2").is_err());
        assert!(RelationTable::parse("0 1").is_err());
        assert_eq!(rel.domain(), vec![rat(0, 1), rat(1, 1)]);
    }
}
