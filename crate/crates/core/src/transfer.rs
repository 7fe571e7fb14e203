//! Transfer of winning strategies between games on the shrink-rate hyperbola.
//!
//! Two radius-schedule games share the product ab = a'b' with a < a'. A
//! strategy for one can be carried to the other by maintaining a shadow run
//! of the source game next to the real run and copying centers across, as
//! long as the primed first radius rho' sits strictly inside the window
//!
//!   rho (a/a')(1-b)/(1-b')  <  rho'  <  rho (1-a)/(1-a').
//!
//! Substituting b' = ab/a' shows the window is nonempty exactly when
//! a < a' < 1, and the same two inequalities rearranged give the window for
//! rho in terms of rho', so one parameter set serves both directions.
//!
//! Player II's direction (`transfer_ii`): the shadow runs at (a', b', rho'),
//! the real game at (a, b, rho). I's real centers are snapped onto a
//! countable dense set within eps_n and fed to the shadow; II answers with
//! the shadow strategy's center at the real scheduled radius. Writing
//! s = ab, the allowance is
//!
//!   eps_n = min{ s^n (rho(1-a) - rho'(1-a')),
//!                s^(n-1) (a' rho'(1-b') - a rho(1-b)) },
//!
//! kept verbatim including the s^(-1) factor at n = 0 (the shadow's first
//! move is unconstrained, so that branch only binds from n = 1 on). The
//! first branch absorbs the snap inside II's real slack
//! (|y'-x| <= shadow slack + eps <= real slack), the second keeps the
//! snapped I move legal in the shadow (|x'-y'| <= real I slack + eps <=
//! shadow I slack). Both branches are positive exactly on the window.
//!
//! Player I's direction (`transfer_i`): the shadow runs at (a, b, rho), the
//! real game at (a', b', rho'). I's real centers coincide with the shadow
//! centers and II's real moves are snapped into the shadow. Working through
//! the same two legality arguments with the roles of the games swapped
//! (snapped II move inside the shadow II slack, copied I response inside the
//! real I slack) yields
//!
//!   eps'_n = s^n min{ rho(1-a) - rho'(1-a'),  a' rho'(1-b') - a rho(1-b) },
//!
//! the same branch expressions with the scaling applied uniformly. The
//! source text states the direction and leaves the formula to the reader;
//! the derivation above is the one implemented and tested here.

use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;

use crate::engine::{scheduled_radius, GameParams, Outcome, Position};
use crate::rat::{rat, Rat};
use crate::space::{Ball, Point, SpaceKind};
use crate::strategy::{
    concentric, maximize_distance_from, Anchor, Strategy, StrategyError, WithFirstMove,
};
use crate::target::TargetSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransferError {
    UnitInterval(&'static str),
    NonPositiveRho(&'static str),
    /// a'b' must equal ab.
    OffHyperbola { left: Rat, right: Rat },
    /// The transfer needs a < a' strictly.
    ShrinkOrder,
    RhoPrimeOutOfRange { lo: Rat, hi: Rat, got: Rat },
    /// A probe run failed inside the engine.
    Engine(String),
}

impl fmt::Display for TransferError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransferError::UnitInterval(name) => {
                write!(f, "{} must lie strictly between 0 and 1", name)
            }
            TransferError::NonPositiveRho(name) => write!(f, "{} must be positive", name),
            TransferError::OffHyperbola { left, right } => {
                write!(f, "shrink products differ: a'b' = {} but ab = {}", left, right)
            }
            TransferError::ShrinkOrder => write!(f, "transfer needs a < a'"),
            TransferError::RhoPrimeOutOfRange { lo, hi, got } => {
                write!(f, "rho' = {} outside the open window ({}, {})", got, lo, hi)
            }
            TransferError::Engine(msg) => write!(f, "probe run failed: {}", msg),
        }
    }
}

impl std::error::Error for TransferError {}

fn check_unit(r: &Rat, name: &'static str) -> Result<(), TransferError> {
    if r.is_positive() && *r < Rat::one() {
        Ok(())
    } else {
        Err(TransferError::UnitInterval(name))
    }
}

fn check_ordering(
    alpha: &Rat,
    beta: &Rat,
    alpha_p: &Rat,
    beta_p: &Rat,
) -> Result<(), TransferError> {
    check_unit(alpha, "a")?;
    check_unit(beta, "b")?;
    check_unit(alpha_p, "a'")?;
    check_unit(beta_p, "b'")?;
    let (left, right) = (alpha_p * beta_p, alpha * beta);
    if left != right {
        return Err(TransferError::OffHyperbola { left, right });
    }
    // b' < b follows from a < a' on the hyperbola
    if !(alpha < alpha_p) {
        return Err(TransferError::ShrinkOrder);
    }
    Ok(())
}

/// The open window for rho': (rho (a/a')(1-b)/(1-b'), rho (1-a)/(1-a')).
/// lo < hi is guaranteed by the parameter ordering.
pub fn rho_prime_bounds(
    alpha: &Rat,
    beta: &Rat,
    alpha_p: &Rat,
    beta_p: &Rat,
    rho: &Rat,
) -> Result<(Rat, Rat), TransferError> {
    check_ordering(alpha, beta, alpha_p, beta_p)?;
    if !rho.is_positive() {
        return Err(TransferError::NonPositiveRho("rho"));
    }
    let lo = rho * &(alpha / alpha_p) * (Rat::one() - beta) / (Rat::one() - beta_p);
    let hi = rho * &(Rat::one() - alpha) / (Rat::one() - alpha_p);
    Ok((lo, hi))
}

/// A first radius for the primed game: a member of the radius set
/// U a^n b^m Q+ strictly inside the window, found by searching (n, m) by
/// increasing n+m and positive rationals q by increasing denominator then
/// numerator. Positive rationals alone are dense in every interval with
/// hi > 0, so the (0, 0) layer always answers and the outer layers never
/// fire; they are kept in the signature because membership in the radius
/// set is part of the contract (q itself witnesses n = m = 0). None when
/// no positive rational fits.
pub fn pick_rho_prime(lo: &Rat, hi: &Rat, _alpha: &Rat, _beta: &Rat) -> Option<Rat> {
    if lo >= hi || !hi.is_positive() {
        return None;
    }
    let mut den = BigInt::from(1u32);
    loop {
        let floor_p: BigInt = (lo * &Rat::from_bigint(den.clone())).floor_int() + 1;
        let mut p = if floor_p < BigInt::from(1u32) { BigInt::from(1u32) } else { floor_p };
        loop {
            let q = Rat::from_frac(p.clone(), den.clone());
            if q >= *hi {
                break;
            }
            if q > *lo {
                return Some(q);
            }
            p += 1;
        }
        den += 1;
    }
}

/// Snap allowance for II's direction at round n, verbatim two-branch form
/// with the s^(-1) factor at n = 0.
pub fn epsilon(
    n: usize,
    alpha: &Rat,
    beta: &Rat,
    alpha_p: &Rat,
    beta_p: &Rat,
    rho: &Rat,
    rho_p: &Rat,
) -> Rat {
    let s = alpha * beta;
    let one = Rat::one();
    let b1 = rho * &(&one - alpha) - rho_p * &(&one - alpha_p);
    let b2 = alpha_p * rho_p * (&one - beta_p) - alpha * rho * (&one - beta);
    let n = n as i64;
    (s.pow(n) * b1).min(s.pow(n - 1) * b2)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DenseEnum {
    /// Every representable center is already rational: snapping is identity.
    Rationals,
    /// Denominators restricted to powers of two.
    Dyadics,
}

/// Nearest dyadic with |result - x| < within.
fn dyadic_round(x: &Rat, within: &Rat) -> Rat {
    let mut k: u32 = 0;
    while Rat::pow2_neg(k) >= *within {
        k += 1;
    }
    let scale = Rat::pow2_neg(k).pow(-1);
    let n = (x * &scale + rat(1, 2)).floor_int();
    Rat::from_bigint(n) / scale
}

impl DenseEnum {
    /// A member of the dense set strictly within `within` of `p`.
    pub fn snap(&self, p: &Point, within: &Rat) -> Point {
        match self {
            DenseEnum::Rationals => p.clone(),
            DenseEnum::Dyadics => match p {
                Point::Line(x) => Point::Line(dyadic_round(x, within)),
                Point::Euclid(v) => {
                    // per-coordinate budget keeps the euclidean norm under
                    // `within` (l2 <= l1)
                    let per = within / &Rat::int(v.len() as i64);
                    Point::Euclid(v.iter().map(|x| dyadic_round(x, &per)).collect())
                }
                Point::Baire(_) => p.clone(),
            },
        }
    }
}

/// One point on the hyperbola with a validated primed radius. Serves both
/// directions: `transfer_ii` carries a strategy from (a', b', rho') down to
/// (a, b, rho), `transfer_i` carries one from (a, b, rho) up to
/// (a', b', rho').
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransferParams {
    pub alpha: Rat,
    pub beta: Rat,
    pub alpha_p: Rat,
    pub beta_p: Rat,
    pub rho: Rat,
    pub rho_p: Rat,
    pub dense: DenseEnum,
}

impl TransferParams {
    pub fn new(
        alpha: Rat,
        beta: Rat,
        alpha_p: Rat,
        beta_p: Rat,
        rho: Rat,
        rho_p: Rat,
        dense: DenseEnum,
    ) -> Result<TransferParams, TransferError> {
        let (lo, hi) = rho_prime_bounds(&alpha, &beta, &alpha_p, &beta_p, &rho)?;
        if !rho_p.is_positive() {
            return Err(TransferError::NonPositiveRho("rho'"));
        }
        if !(rho_p > lo && rho_p < hi) {
            return Err(TransferError::RhoPrimeOutOfRange { lo, hi, got: rho_p });
        }
        Ok(TransferParams { alpha, beta, alpha_p, beta_p, rho, rho_p, dense })
    }

    /// The (a, b, rho) game.
    pub fn unprimed_game(&self) -> GameParams {
        GameParams::schmidt(self.alpha.clone(), self.beta.clone(), Some(self.rho.clone()))
            .expect("validated")
    }

    /// The (a', b', rho') game.
    pub fn primed_game(&self) -> GameParams {
        GameParams::schmidt(self.alpha_p.clone(), self.beta_p.clone(), Some(self.rho_p.clone()))
            .expect("validated")
    }

    /// Allowance for II's direction at round n.
    pub fn epsilon_ii(&self, n: usize) -> Rat {
        epsilon(n, &self.alpha, &self.beta, &self.alpha_p, &self.beta_p, &self.rho, &self.rho_p)
    }

    /// Allowance for I's direction at round n: the same branches scaled
    /// uniformly by s^n (see the module notes for the derivation).
    pub fn epsilon_i(&self, n: usize) -> Rat {
        let s = &self.alpha * &self.beta;
        let one = Rat::one();
        let b1 = &self.rho * &(&one - &self.alpha) - &self.rho_p * &(&one - &self.alpha_p);
        let b2 = &self.alpha_p * &self.rho_p * (&one - &self.beta_p)
            - &self.alpha * &self.rho * (&one - &self.beta);
        s.pow(n as i64) * b1.min(b2)
    }
}

/// II strategy for the (a, b, rho) game driven by a shadow strategy `tau_p`
/// for the (a', b', rho') game. Positional in I's real balls only: the
/// shadow run is rebuilt from them on every call, with II's shadow moves
/// recomputed via `tau_p`.
pub struct TransferredII {
    pub params: TransferParams,
    tau_p: Rc<dyn Strategy>,
}

pub fn transfer_ii(tau_p: Rc<dyn Strategy>, params: TransferParams) -> TransferredII {
    TransferredII { params, tau_p }
}

impl TransferredII {
    /// Shadow run for a position where II is to move: snapped I balls
    /// alternating with tau_p's recomputed responses, ending in the snapped
    /// last I ball.
    pub fn shadow_position(&self, pos: &Position) -> Result<Position, StrategyError> {
        if pos.turn() % 2 != 1 {
            return Err(StrategyError::new("transferred II strategy moves second"));
        }
        let shadow_game = self.params.primed_game();
        let mut shadow = Position::empty();
        for (idx, ball) in pos.balls().iter().enumerate() {
            if idx % 2 == 1 {
                continue; // II's real balls play no part in the shadow
            }
            if idx > 0 {
                let resp = self.tau_p.next(&shadow)?;
                shadow.push_unchecked(resp);
            }
            let n = idx / 2;
            let center = self.params.dense.snap(&ball.center, &self.params.epsilon_ii(n));
            let radius = scheduled_radius(&shadow_game, &shadow)
                .expect("schmidt schedule is total");
            shadow.push_unchecked(Ball::new(center, radius));
        }
        Ok(shadow)
    }
}

impl Strategy for TransferredII {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        let shadow = self.shadow_position(pos)?;
        let resp = self.tau_p.next(&shadow)?;
        let r_new = scheduled_radius(&self.params.unprimed_game(), pos)
            .expect("schmidt schedule is total");
        Ok(Ball::new(resp.center, r_new))
    }
}

/// I strategy for the (a', b', rho') game driven by a shadow strategy
/// `sigma_p` for the (a, b, rho) game. Positional in II's real balls only.
pub struct TransferredI {
    pub params: TransferParams,
    sigma_p: Rc<dyn Strategy>,
}

pub fn transfer_i(sigma_p: Rc<dyn Strategy>, params: TransferParams) -> TransferredI {
    TransferredI { params, sigma_p }
}

impl TransferredI {
    /// Shadow run for a position where I is to move: sigma_p's recomputed
    /// balls alternating with snapped II balls, ending in the snapped last
    /// II ball (empty when the real game has not started).
    pub fn shadow_position(&self, pos: &Position) -> Result<Position, StrategyError> {
        if pos.turn() % 2 != 0 {
            return Err(StrategyError::new("transferred I strategy moves first"));
        }
        let shadow_game = self.params.unprimed_game();
        let mut shadow = Position::empty();
        for (idx, ball) in pos.balls().iter().enumerate() {
            if idx % 2 == 0 {
                // I's real balls are shadow centers at the real radius;
                // recompute the shadow original
                let resp = self.sigma_p.next(&shadow)?;
                shadow.push_unchecked(resp);
                continue;
            }
            let n = idx / 2;
            let center = self.params.dense.snap(&ball.center, &self.params.epsilon_i(n));
            let radius = scheduled_radius(&shadow_game, &shadow)
                .expect("schmidt schedule is total");
            shadow.push_unchecked(Ball::new(center, radius));
        }
        Ok(shadow)
    }
}

impl Strategy for TransferredI {
    fn next(&self, pos: &Position) -> Result<Ball, StrategyError> {
        let shadow = self.shadow_position(pos)?;
        let resp = self.sigma_p.next(&shadow)?;
        let r_new = scheduled_radius(&self.params.primed_game(), pos)
            .expect("fixed rho' and schmidt schedule");
        Ok(Ball::new(resp.center, r_new))
    }
}

/// One row of a hyperbola dominance check: a run of the primed game and,
/// when it produced a II certificate, the transferred re-run.
#[derive(Debug)]
pub struct ProbeRow {
    pub params: TransferParams,
    pub primed: Outcome,
    pub transferred: Option<Outcome>,
    /// Some(false) marks a monotonicity violation: a primed II certificate
    /// whose transfer failed to re-certify. None when the primed run was
    /// inconclusive.
    pub consistent: Option<bool>,
}

/// For each adjacent pair of samples (sorted by a) sharing the product p,
/// play the game at the larger shrink rate with the built-in
/// distance-maximizing II against a concentric I, and if II earns a
/// certificate, carry the same II strategy down to the smaller rate and
/// re-verify. Inconclusive primed runs yield rows with `consistent: None`.
pub fn hyperbola_probe(
    target: &dyn TargetSet,
    p: &Rat,
    rho: &Rat,
    samples: &[(Rat, Rat)],
    depth: usize,
) -> Result<Vec<ProbeRow>, TransferError> {
    for (a, b) in samples {
        if &(a * b) != p {
            return Err(TransferError::OffHyperbola { left: a * b, right: p.clone() });
        }
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|x, y| x.0.cmp_rat(&y.0));
    let origin = match target.space() {
        SpaceKind::Line => Point::Line(Rat::zero()),
        SpaceKind::Euclid(d) => Point::Euclid(vec![Rat::zero(); d]),
        SpaceKind::Baire => Point::Baire(crate::space::BairePoint::new(vec![], 0)),
    };
    let mut rows = Vec::new();
    for pair in sorted.windows(2) {
        let (alpha, beta) = pair[0].clone();
        let (alpha_p, beta_p) = pair[1].clone();
        let (lo, hi) = rho_prime_bounds(&alpha, &beta, &alpha_p, &beta_p, rho)?;
        let rho_p = pick_rho_prime(&lo, &hi, &alpha, &beta)
            .expect("window is nonempty and positive");
        let params = TransferParams::new(
            alpha, beta, alpha_p, beta_p, rho.clone(), rho_p, DenseEnum::Rationals,
        )?;
        let primed_game = params.primed_game();
        let tau: Rc<dyn Strategy> = Rc::new(maximize_distance_from(
            primed_game.clone(),
            Anchor::Point(origin.clone()),
        ));
        let opener = |game: &GameParams, r0: Rat| WithFirstMove {
            first: Ball::new(origin.clone(), r0),
            inner: Box::new(concentric(game.clone())),
        };
        let primed_i = opener(&primed_game, params.rho_p.clone());
        let (_, primed) = crate::engine::play(&primed_game, &primed_i, tau.as_ref(), target, depth)
            .map_err(|e| TransferError::Engine(e.to_string()))?;
        let mut transferred = None;
        let mut consistent = None;
        if primed.winner() == Some(crate::engine::Player::II) {
            let real_game = params.unprimed_game();
            let real_i = opener(&real_game, params.rho.clone());
            let tau_real = transfer_ii(tau.clone(), params.clone());
            let (_, real) = crate::engine::play(&real_game, &real_i, &tau_real, target, depth)
                .map_err(|e| TransferError::Engine(e.to_string()))?;
            consistent = Some(real.winner() == Some(crate::engine::Player::II));
            transferred = Some(real);
        }
        rows.push(ProbeRow { params, primed, transferred, consistent });
    }
    Ok(rows)
}
