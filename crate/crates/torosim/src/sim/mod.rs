//! 2D quasistatic locomotion simulator for everting toroidal robots in
//! polygonal environments.
//!
//! The robot is modeled as a growing centerline: the tip advances at the
//! commanded eversion speed and lays body points that never move again
//! (the outer skin is stationary with respect to the environment); the
//! tail retracts to keep the body arc length bounded. Steering is fully
//! passive: on tip-wall contact the heading is projected onto the wall
//! tangent. The membrane cross-section is a width field along the body,
//! clamped between the rigid device diameter and the inflated membrane
//! diameter by the local wall gap.
//!
//! There is no inertia and no force-based contact resolution here; the
//! statics and anchoring modules answer whether the robot can move or
//! hold, the simulator answers where it goes.

pub mod geometry;

use std::collections::BTreeSet;

use geometry::{perp, point_in_convex_polygon, polygon_is_convex, Point, Segment, Vec2};

use crate::{Error, Result};

/// Default integration step (s).
pub const DEFAULT_DT: f64 = 0.01;
/// Centerline points may come no closer to a wall than the current tip
/// radius minus this tolerance (m).
pub const PENETRATION_TOLERANCE: f64 = 1e-4;
/// Commanded-advance fraction below which a step counts as stalled.
pub const STALL_FRACTION: f64 = 0.1;
/// Consecutive stalled steps before the robot is declared stuck.
pub const STALL_LIMIT: u32 = 50;

/// Tangential sliding keeps this much numerical clearance (m).
const GRAZE_EPS: f64 = 1e-9;
/// Radial give when squeezing a constriction, so a passage exactly twice
/// the squeezed radius is traversable (m).
const SQUEEZE_SLACK: f64 = 1e-6;
/// Wall proximity that counts as touching for contact bookkeeping (m).
const CONTACT_TOLERANCE: f64 = 1e-6;
/// Width values this close to the membrane diameter snap to it exactly (m).
const WIDTH_SNAP: f64 = 1e-9;
/// Lateral feature offsets smaller than this cannot be straddled (m).
const STRADDLE_SIGN_EPS: f64 = 1e-9;
/// Deflections per step before the tip is considered wedged.
const MAX_SLIDE_ITERS: usize = 8;

/// A locomotion scenario: the environment, the robot cross-section, and
/// the run bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarScenario {
    /// Environment walls (world frame, m). Orientation of each segment is
    /// the tie-break slide direction for exactly perpendicular contact.
    pub walls: Vec<Segment>,
    pub start_position: Point,
    /// Unit vector; initial eversion direction.
    pub start_heading: Vec2,
    /// Maximum body arc length (m).
    pub robot_body_length: f64,
    /// Inflated membrane diameter (m); body width when unconstrained.
    pub membrane_diameter: f64,
    /// Rigid device diameter (m); the hard lower bound on squeezing.
    pub device_diameter: f64,
    /// Tip eversion speed (m/s).
    pub tip_speed: f64,
    /// Convex polygon; the run succeeds when the tip enters it.
    pub goal_region: Vec<Point>,
    /// Simulated-time budget (s).
    pub max_sim_time: f64,
}

impl PlanarScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.device_diameter > 0.0 && self.device_diameter < self.membrane_diameter) {
            return Err(Error::invalid(
                "device_diameter must be positive and smaller than membrane_diameter",
            ));
        }
        if self.tip_speed <= 0.0 {
            return Err(Error::invalid("tip_speed must be positive"));
        }
        if self.max_sim_time <= 0.0 {
            return Err(Error::invalid("max_sim_time must be positive"));
        }
        if self.robot_body_length <= 0.0 {
            return Err(Error::invalid("robot_body_length must be positive"));
        }
        if (self.start_heading.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("start_heading must be a unit vector"));
        }
        for (i, w) in self.walls.iter().enumerate() {
            if w.length() == 0.0 {
                return Err(Error::invalid(format!("wall {i} has zero length")));
            }
            for (j, other) in self.walls.iter().enumerate().skip(i + 1) {
                if w.crosses_properly(other) {
                    return Err(Error::invalid(format!("walls {i} and {j} cross")));
                }
            }
        }
        if !polygon_is_convex(&self.goal_region) {
            return Err(Error::invalid("goal_region must be a convex polygon"));
        }
        Ok(())
    }

    /// The zigzag maze demonstration: two baffles force wall-following
    /// direction changes, and the exit is an aperture narrower than the
    /// membrane but wider than the device.
    pub fn maze_demo() -> Self {
        Self::maze_demo_with_aperture(0.11)
    }

    /// Same maze with the exit aperture set to `width` (m), centered on
    /// y = 0.525.
    pub fn maze_demo_with_aperture(width: f64) -> Self {
        let half = width / 2.0;
        let lower_lip = 0.525 - half;
        let upper_lip = 0.525 + half;
        PlanarScenario {
            walls: vec![
                Segment::new(0.0, 0.0, 1.5, 0.0),     // floor
                Segment::new(1.5, 0.0, 1.5, 0.6),     // right wall
                Segment::new(1.5, 0.6, 0.0, 0.6),     // ceiling
                Segment::new(0.0, 0.6, 0.0, 0.0),     // left wall
                Segment::new(0.35, 0.6, 0.55, 0.25),  // baffle from ceiling
                Segment::new(0.9, 0.0, 1.1, 0.45),    // baffle from floor
                Segment::new(1.3, 0.6, 1.3, upper_lip), // aperture, upper lip
                Segment::new(1.3, lower_lip, 1.3, 0.0), // aperture, lower lip
            ],
            start_position: Point::new(0.08, 0.30),
            start_heading: Vec2::new(1.0, 0.0),
            robot_body_length: 0.45,
            membrane_diameter: 0.137,
            device_diameter: 0.104,
            tip_speed: 0.061,
            goal_region: vec![
                Point::new(1.38, 0.40),
                Point::new(1.50, 0.40),
                Point::new(1.50, 0.60),
                Point::new(1.38, 0.60),
            ],
            max_sim_time: 80.0,
        }
    }

    /// Vertical pipe climb: a 12.4 cm bore pipe, 30.5 cm long, climbed
    /// bottom to top.
    pub fn vertical_pipe_demo() -> Self {
        PlanarScenario {
            walls: vec![
                Segment::new(-0.062, 0.0, -0.062, 0.305),
                Segment::new(0.062, 0.0, 0.062, 0.305),
            ],
            start_position: Point::new(0.0, -0.15),
            start_heading: Vec2::new(0.0, 1.0),
            robot_body_length: 0.25,
            membrane_diameter: 0.137,
            device_diameter: 0.104,
            tip_speed: 0.061,
            goal_region: vec![
                Point::new(-0.10, 0.355),
                Point::new(0.10, 0.355),
                Point::new(0.10, 0.50),
                Point::new(-0.10, 0.50),
            ],
            max_sim_time: 20.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    ContactBegin { wall: usize },
    Deflection { wall: usize },
    SqueezeBegin,
    SqueezeEnd,
    GoalReached,
    Stuck,
}

impl EventKind {
    pub fn label(&self) -> &'static str {
        match self {
            EventKind::ContactBegin { .. } => "contact-begin",
            EventKind::Deflection { .. } => "deflection",
            EventKind::SqueezeBegin => "squeeze-begin",
            EventKind::SqueezeEnd => "squeeze-end",
            EventKind::GoalReached => "goal-reached",
            EventKind::Stuck => "stuck",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    /// Simulated time at the end of the step that produced the event (s).
    pub time: f64,
    pub kind: EventKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    GoalReached,
    Stuck,
    Timeout,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::GoalReached => "goal-reached",
            Outcome::Stuck => "stuck",
            Outcome::Timeout => "timeout",
        }
    }
}

/// Simulation state. Points already laid are immutable; the tip appends
/// and the tail pops whole points.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    /// Body centerline, tail first, tip last (m).
    pub centerline: Vec<Point>,
    /// Local body width at each centerline point (m).
    pub local_width: Vec<f64>,
    /// Current eversion direction at the tip (unit).
    pub tip_heading: Vec2,
    /// Touching pairs `(centerline point index, wall index)`.
    pub contacts: BTreeSet<(usize, usize)>,
    /// Simulated time (s).
    pub elapsed: f64,
    pub event_log: Vec<Event>,
    /// Ordinal (since the start of the run) of `centerline[0]`; aligns
    /// snapshots taken at different times for stationary-skin checks.
    pub first_point_ordinal: usize,
    /// Walls each current point touches, parallel to `centerline`.
    point_walls: Vec<Vec<usize>>,
    tip_contact_walls: BTreeSet<usize>,
    in_squeeze: bool,
    stall_steps: u32,
    last_deflect_wall: Option<usize>,
    stuck: bool,
}

impl SimState {
    pub fn initial(scenario: &PlanarScenario) -> Self {
        let tip = scenario.start_position;
        let heading = scenario.start_heading;
        let width = width_at(scenario, &tip, &heading);
        let walls_here = touching_walls(scenario, &tip, width);
        let tip_contact_walls: BTreeSet<usize> = walls_here.iter().copied().collect();
        let mut state = SimState {
            centerline: vec![tip],
            local_width: vec![width],
            tip_heading: heading,
            contacts: BTreeSet::new(),
            elapsed: 0.0,
            event_log: Vec::new(),
            first_point_ordinal: 0,
            point_walls: vec![walls_here],
            tip_contact_walls,
            in_squeeze: width < scenario.membrane_diameter,
            stall_steps: 0,
            last_deflect_wall: None,
            stuck: false,
        };
        state.rebuild_contacts();
        state
    }

    pub fn tip(&self) -> Point {
        *self.centerline.last().expect("centerline is never empty")
    }

    pub fn arc_length(&self) -> f64 {
        self.centerline
            .windows(2)
            .map(|pair| (pair[1] - pair[0]).norm())
            .sum()
    }

    pub fn is_stuck(&self) -> bool {
        self.stuck
    }

    /// Smallest distance from any centerline point to any wall (m).
    pub fn min_wall_clearance(&self, walls: &[Segment]) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.centerline {
            for w in walls {
                best = best.min(w.distance(p));
            }
        }
        best
    }

    fn rebuild_contacts(&mut self) {
        self.contacts = self
            .point_walls
            .iter()
            .enumerate()
            .flat_map(|(i, walls)| walls.iter().map(move |&w| (i, w)))
            .collect();
    }
}

/// Lateral free-space gap (m) around `point` perpendicular to `heading`,
/// measured by rays and capped at one membrane radius per side, so a
/// single touched wall does not read as a squeeze.
fn ray_gap(scenario: &PlanarScenario, point: &Point, heading: &Vec2) -> f64 {
    let half = scenario.membrane_diameter / 2.0;
    let normal = perp(heading);
    let side = |dir: Vec2| -> f64 {
        scenario
            .walls
            .iter()
            .filter_map(|w| w.raycast(point, &dir))
            .fold(half, f64::min)
    };
    side(normal) + side(-normal)
}

/// Width of the narrowest passage straddling the tip's path, if any: the
/// smallest distance between a wall feature clearly to the left of the
/// heading line and one clearly to the right, both within membrane reach
/// of the swept tip path. Feature separation is euclidean, so the
/// passage width does not depend on the tip's instantaneous heading.
fn straddle_gap(scenario: &PlanarScenario, tip: &Point, heading: &Vec2) -> Option<f64> {
    let reach = scenario.membrane_diameter / 2.0;
    let swept = Segment {
        a: *tip,
        b: *tip + heading * reach,
    };
    let normal = perp(heading);
    let mut left: Vec<Point> = Vec::new();
    let mut right: Vec<Point> = Vec::new();
    for wall in &scenario.walls {
        let (on_path, on_wall) = swept.closest_points_to_segment(wall);
        if (on_wall - on_path).norm() > reach {
            continue;
        }
        let offset = (on_wall - tip).dot(&normal);
        if offset > STRADDLE_SIGN_EPS {
            left.push(on_wall);
        } else if offset < -STRADDLE_SIGN_EPS {
            right.push(on_wall);
        }
        // features on the heading line itself block; they are not a passage
    }
    let mut gap: Option<f64> = None;
    for l in &left {
        for r in &right {
            let separation = (l - r).norm();
            gap = Some(gap.map_or(separation, |g: f64| g.min(separation)));
        }
    }
    gap
}

/// Tip disk radius for motion: the membrane radius, shrunk to squeeze
/// through a straddled passage when (and only when) the rigid device
/// fits through it.
fn effective_radius(scenario: &PlanarScenario, gap: Option<f64>) -> f64 {
    let r_membrane = scenario.membrane_diameter / 2.0;
    let r_device = scenario.device_diameter / 2.0;
    match gap {
        Some(g) if g >= scenario.device_diameter && g < scenario.membrane_diameter => {
            (g / 2.0 - SQUEEZE_SLACK).clamp(r_device, r_membrane)
        }
        _ => r_membrane,
    }
}

/// Local body width when a point is laid at `point` moving along
/// `heading`: membrane diameter unless walls constrain it from both
/// sides, never below the device diameter.
fn width_at(scenario: &PlanarScenario, point: &Point, heading: &Vec2) -> f64 {
    let mut gap = ray_gap(scenario, point, heading);
    if let Some(g) = straddle_gap(scenario, point, heading) {
        gap = gap.min(g);
    }
    let width = gap.clamp(scenario.device_diameter, scenario.membrane_diameter);
    if width > scenario.membrane_diameter - WIDTH_SNAP {
        scenario.membrane_diameter
    } else {
        width
    }
}

fn touching_walls(scenario: &PlanarScenario, point: &Point, width: f64) -> Vec<usize> {
    scenario
        .walls
        .iter()
        .enumerate()
        .filter(|(_, w)| w.distance(point) <= width / 2.0 + CONTACT_TOLERANCE)
        .map(|(i, _)| i)
        .collect()
}

struct Hit {
    travel: f64,
    wall: usize,
}

/// First wall the tip disk of radius `radius` meets when moving from
/// `tip` along `heading` by up to `max_travel`. Tangential grazing and
/// receding motion are free; only motion that closes in below the radius
/// blocks.
fn first_hit(
    scenario: &PlanarScenario,
    tip: &Point,
    heading: &Vec2,
    max_travel: f64,
    radius: f64,
) -> Option<Hit> {
    let end = *tip + heading * max_travel;
    let mut best: Option<Hit> = None;
    for (index, wall) in scenario.walls.iter().enumerate() {
        let d_start = wall.distance(tip);
        let d_end = wall.distance(&end);
        if d_end >= radius - GRAZE_EPS || d_end >= d_start {
            continue;
        }
        let travel = if d_start <= radius {
            0.0
        } else {
            // distance to a segment is convex along a line: one crossing
            let mut lo = 0.0f64;
            let mut hi = max_travel;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if wall.distance(&(*tip + heading * mid)) >= radius {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        if best.as_ref().is_none_or(|b| travel < b.travel) {
            best = Some(Hit {
                travel,
                wall: index,
            });
        }
    }
    best
}

/// Direction of the body just behind the tip: from the centerline point
/// at least one membrane radius back (or the tail, when the body is
/// shorter) toward the tip. The everting tip is fed along this axis and
/// cannot turn back against it.
fn neck_direction(scenario: &PlanarScenario, state: &SimState) -> Vec2 {
    let reach = scenario.membrane_diameter / 2.0;
    let points = &state.centerline;
    let tip = state.tip();
    let mut accumulated = 0.0;
    let mut anchor = points[points.len() - 1];
    for i in (0..points.len().saturating_sub(1)).rev() {
        accumulated += (points[i + 1] - points[i]).norm();
        anchor = points[i];
        if accumulated >= reach {
            break;
        }
    }
    let direction = tip - anchor;
    if direction.norm() > 1e-12 {
        direction / direction.norm()
    } else {
        state.tip_heading
    }
}

/// Passive steering: project the heading onto the contacted wall tangent
/// (sign chosen to keep moving forward; exact perpendicular incidence
/// slides along the wall's stored orientation). When several walls touch
/// at once, only tangents that neither close in on a touching wall nor
/// turn back against the body neck are admissible; among those, the one
/// demanding the smallest heading change wins, with exact ties going to
/// the lowest wall index. `None` means the tip is wedged.
fn deflect(
    scenario: &PlanarScenario,
    tip: &Point,
    heading: &Vec2,
    neck: &Vec2,
    candidates: &[usize],
) -> Option<(Vec2, usize)> {
    let normals: Vec<(usize, Vec2)> = candidates
        .iter()
        .map(|&index| {
            let wall = &scenario.walls[index];
            let closest = wall.closest_point(tip);
            let offset = tip - closest;
            let normal = if offset.norm() > 1e-12 {
                offset / offset.norm()
            } else {
                // tip exactly on the wall line; any perpendicular works
                perp(&wall.direction()).normalize()
            };
            (index, normal)
        })
        .collect();
    let mut best: Option<(f64, Vec2, usize)> = None;
    for &(index, normal) in &normals {
        let wall = &scenario.walls[index];
        let tangent_line = perp(&normal);
        let along = heading.dot(&tangent_line);
        let candidate = if along.abs() > 1e-12 {
            tangent_line * along.signum()
        } else {
            wall.direction().normalize()
        };
        if candidate.dot(neck) < -1e-12 {
            continue;
        }
        if normals.iter().any(|(_, n)| candidate.dot(n) < -1e-12) {
            continue;
        }
        let score = heading.dot(&candidate);
        if best.as_ref().is_none_or(|(s, _, _)| score > *s) {
            best = Some((score, candidate, index));
        }
    }
    best.map(|(_, new_heading, wall)| (new_heading, wall))
}

/// Advances the simulation by `dt` seconds. Laid body points never move;
/// the tail retracts by whole points to keep the arc length within the
/// body length.
pub fn step(scenario: &PlanarScenario, state: &SimState, dt: f64) -> SimState {
    assert!(dt > 0.0, "dt must be positive");
    let mut next = state.clone();
    let commanded = scenario.tip_speed * dt;
    let neck = neck_direction(scenario, state);
    let mut tip = state.tip();
    let mut heading = state.tip_heading;
    let mut remaining = commanded;
    let mut touched: Vec<usize> = Vec::new();
    let mut deflected: Vec<usize> = Vec::new();

    for _ in 0..MAX_SLIDE_ITERS {
        if remaining <= commanded * 1e-9 {
            break;
        }
        let radius = effective_radius(scenario, straddle_gap(scenario, &tip, &heading));
        match first_hit(scenario, &tip, &heading, remaining, radius) {
            None => {
                tip += heading * remaining;
                remaining = 0.0;
            }
            Some(hit) => {
                tip += heading * hit.travel;
                remaining -= hit.travel;
                // everything within a graze of the contact radius steers
                let candidates: Vec<usize> = scenario
                    .walls
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| w.distance(&tip) <= radius + 2.0 * GRAZE_EPS)
                    .map(|(i, _)| i)
                    .collect();
                let candidates = if candidates.is_empty() {
                    vec![hit.wall]
                } else {
                    candidates
                };
                let Some((new_heading, wall)) =
                    deflect(scenario, &tip, &heading, &neck, &candidates)
                else {
                    // wedged: every slide either closes on a touching wall
                    // or turns back against the body; keep pushing in place
                    touched.push(hit.wall);
                    break;
                };
                touched.push(wall);
                if (new_heading - heading).norm() > 1e-12 {
                    deflected.push(wall);
                }
                heading = new_heading;
            }
        }
    }

    let advanced = commanded - remaining;
    let time_after = state.elapsed + dt;

    if advanced > 0.0 {
        let width = width_at(scenario, &tip, &heading);
        let walls_here = touching_walls(scenario, &tip, width);
        next.centerline.push(tip);
        next.local_width.push(width);
        next.point_walls.push(walls_here);
    }
    next.tip_heading = heading;
    next.elapsed = time_after;

    // tail retraction by whole points
    let mut arc = next.arc_length();
    let mut drop = 0;
    while arc > scenario.robot_body_length && drop + 1 < next.centerline.len() {
        arc -= (next.centerline[drop + 1] - next.centerline[drop]).norm();
        drop += 1;
    }
    if drop > 0 {
        next.centerline.drain(..drop);
        next.local_width.drain(..drop);
        next.point_walls.drain(..drop);
        next.first_point_ordinal += drop;
    }

    // contact events at the tip
    let mut tip_walls: BTreeSet<usize> = touched.iter().copied().collect();
    tip_walls.extend(next.point_walls.last().iter().flat_map(|w| w.iter().copied()));
    for &wall in &tip_walls {
        if !state.tip_contact_walls.contains(&wall) {
            next.event_log.push(Event {
                time: time_after,
                kind: EventKind::ContactBegin { wall },
            });
        }
    }
    next.tip_contact_walls = tip_walls;

    // deflection events, deduplicated while the same wall keeps steering
    for &wall in &deflected {
        if next.last_deflect_wall != Some(wall) {
            next.event_log.push(Event {
                time: time_after,
                kind: EventKind::Deflection { wall },
            });
        }
        next.last_deflect_wall = Some(wall);
    }
    if touched.is_empty() {
        next.last_deflect_wall = None;
    }

    // squeeze transitions follow the tip width
    let tip_width = *next.local_width.last().expect("width per point");
    let squeezed = tip_width < scenario.membrane_diameter;
    if squeezed != next.in_squeeze {
        next.event_log.push(Event {
            time: time_after,
            kind: if squeezed {
                EventKind::SqueezeBegin
            } else {
                EventKind::SqueezeEnd
            },
        });
        next.in_squeeze = squeezed;
    }

    // stall accounting
    if advanced < STALL_FRACTION * commanded {
        next.stall_steps += 1;
    } else {
        next.stall_steps = 0;
    }
    if next.stall_steps >= STALL_LIMIT && !next.stuck {
        next.stuck = true;
        next.event_log.push(Event {
            time: time_after,
            kind: EventKind::Stuck,
        });
    }

    next.rebuild_contacts();
    next
}

/// Runs a scenario to completion with the default step.
pub fn run(scenario: &PlanarScenario) -> Result<(SimState, Outcome)> {
    run_with_dt(scenario, DEFAULT_DT)
}

pub fn run_with_dt(scenario: &PlanarScenario, dt: f64) -> Result<(SimState, Outcome)> {
    run_observed(scenario, dt, |_| {})
}

/// Runs a scenario, invoking `observer` on the initial state and after
/// every step.
pub fn run_observed(
    scenario: &PlanarScenario,
    dt: f64,
    mut observer: impl FnMut(&SimState),
) -> Result<(SimState, Outcome)> {
    scenario.validate()?;
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::invalid("dt must be positive"));
    }
    let mut state = SimState::initial(scenario);
    observer(&state);
    loop {
        if point_in_convex_polygon(&state.tip(), &scenario.goal_region) {
            let time = state.elapsed;
            state.event_log.push(Event {
                time,
                kind: EventKind::GoalReached,
            });
            return Ok((state, Outcome::GoalReached));
        }
        if state.elapsed + 1e-12 >= scenario.max_sim_time {
            return Ok((state, Outcome::Timeout));
        }
        state = step(scenario, &state, dt);
        observer(&state);
        if state.is_stuck() {
            return Ok((state, Outcome::Stuck));
        }
    }
}

/// How a circular cross-section negotiates an opening.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AperturePassage {
    /// Opening at least as wide as the membrane: no deformation.
    PassFree,
    /// Narrower than the membrane but at least the device diameter: the
    /// membrane squeezes through.
    PassSqueeze,
    /// Narrower than the rigid device: impassable.
    Blocked,
}

impl AperturePassage {
    pub fn label(&self) -> &'static str {
        match self {
            AperturePassage::PassFree => "pass-free",
            AperturePassage::PassSqueeze => "pass-squeeze",
            AperturePassage::Blocked => "blocked",
        }
    }
}

pub fn aperture_check(
    aperture_width: f64,
    membrane_diameter: f64,
    device_diameter: f64,
) -> AperturePassage {
    debug_assert!(aperture_width > 0.0);
    debug_assert!(0.0 < device_diameter && device_diameter < membrane_diameter);
    if aperture_width >= membrane_diameter {
        AperturePassage::PassFree
    } else if aperture_width >= device_diameter {
        AperturePassage::PassSqueeze
    } else {
        AperturePassage::Blocked
    }
}

/// Time to traverse a pipe of the given length at steady eversion speed.
pub fn pipe_climb_time(pipe_length: f64, tip_speed: f64) -> f64 {
    assert!(pipe_length >= 0.0, "pipe_length must be nonnegative");
    assert!(tip_speed > 0.0, "tip_speed must be positive");
    pipe_length / tip_speed
}

/// Runs a scenario and renders the tip trajectory as CSV with columns
/// `t,tip_x,tip_y,heading_x,heading_y,n_contacts,event`.
pub fn run_to_trajectory_csv(
    scenario: &PlanarScenario,
    dt: f64,
) -> Result<(SimState, Outcome, String)> {
    let mut csv = String::from("t,tip_x,tip_y,heading_x,heading_y,n_contacts,event\n");
    let mut seen_events = 0usize;
    let (state, outcome) = run_observed(scenario, dt, |s| {
        let events: Vec<&'static str> = s.event_log[seen_events..]
            .iter()
            .map(|e| e.kind.label())
            .collect();
        seen_events = s.event_log.len();
        let tip = s.tip();
        csv.push_str(&format!(
            "{:.5e},{:.5e},{:.5e},{:.5e},{:.5e},{},{}\n",
            s.elapsed,
            tip.x,
            tip.y,
            s.tip_heading.x,
            s.tip_heading.y,
            s.contacts.len(),
            events.join(";")
        ));
    })?;
    // events recorded after the last step (goal-reached)
    if seen_events < state.event_log.len() {
        let events: Vec<&'static str> = state.event_log[seen_events..]
            .iter()
            .map(|e| e.kind.label())
            .collect();
        let tip = state.tip();
        csv.push_str(&format!(
            "{:.5e},{:.5e},{:.5e},{:.5e},{:.5e},{},{}\n",
            state.elapsed,
            tip.x,
            tip.y,
            state.tip_heading.x,
            state.tip_heading.y,
            state.contacts.len(),
            events.join(";")
        ));
    }
    Ok((state, outcome, csv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn open_field(start: Point, heading: Vec2) -> PlanarScenario {
        PlanarScenario {
            walls: vec![],
            start_position: start,
            start_heading: heading,
            robot_body_length: 1.0,
            membrane_diameter: 0.137,
            device_diameter: 0.104,
            tip_speed: 0.05,
            goal_region: vec![
                Point::new(9.0, -1.0),
                Point::new(10.0, -1.0),
                Point::new(10.0, 1.0),
                Point::new(9.0, 1.0),
            ],
            max_sim_time: 10.0,
        }
    }

    #[test]
    fn free_space_advance_is_straight() {
        let scenario = open_field(Point::new(0.0, 0.0), Vec2::new(1.0, 0.0));
        scenario.validate().unwrap();
        let mut state = SimState::initial(&scenario);
        for _ in 0..10 {
            state = step(&scenario, &state, 0.1);
        }
        let expected = 10.0 * 0.05 * 0.1;
        assert_relative_eq!(state.tip().x, expected, max_relative = 1e-12);
        assert_eq!(state.tip().y, 0.0);
        assert!(state.event_log.is_empty());
        assert_eq!(*state.local_width.last().unwrap(), 0.137);
    }

    #[test]
    fn forty_five_degree_wall_projects_heading_onto_tangent() {
        let mut scenario = open_field(Point::new(0.0, 0.0), Vec2::new(1.0, 0.0));
        // wall rising at 45 degrees across the robot's path
        scenario.walls = vec![Segment::new(0.5, -0.5, 1.5, 0.5)];
        scenario.max_sim_time = 4.0;
        scenario.validate().unwrap();
        let mut state = SimState::initial(&scenario);
        let mut deflected = false;
        for _ in 0..2500 {
            state = step(&scenario, &state, 0.01);
            if state
                .event_log
                .iter()
                .any(|e| matches!(e.kind, EventKind::Deflection { .. }))
            {
                deflected = true;
                break;
            }
        }
        assert!(deflected, "expected a deflection event");
        assert_relative_eq!(state.tip_heading.x, FRAC_1_SQRT_2, epsilon = 1e-9);
        assert_relative_eq!(state.tip_heading.y, FRAC_1_SQRT_2, epsilon = 1e-9);
    }

    #[test]
    fn narrow_channel_clamps_width_and_logs_one_squeeze() {
        // corridor of width 0.11 between x = 0.5 and x = 1.1
        let w = 0.11;
        let half = w / 2.0;
        let scenario = PlanarScenario {
            walls: vec![
                Segment::new(0.5, half, 0.5, 0.3),    // entry lip, upper
                Segment::new(0.5, -half, 0.5, -0.3),  // entry lip, lower
                Segment::new(0.5, half, 1.1, half),   // corridor, upper
                Segment::new(0.5, -half, 1.1, -half), // corridor, lower
            ],
            start_position: Point::new(0.1, 0.0),
            start_heading: Vec2::new(1.0, 0.0),
            robot_body_length: 0.6,
            membrane_diameter: 0.137,
            device_diameter: 0.104,
            tip_speed: 0.061,
            goal_region: vec![
                Point::new(1.4, -0.2),
                Point::new(1.6, -0.2),
                Point::new(1.6, 0.2),
                Point::new(1.4, 0.2),
            ],
            max_sim_time: 40.0,
        };
        let (state, outcome) = run(&scenario).unwrap();
        assert_eq!(outcome, Outcome::GoalReached);

        let begins = state
            .event_log
            .iter()
            .filter(|e| e.kind == EventKind::SqueezeBegin)
            .count();
        let ends = state
            .event_log
            .iter()
            .filter(|e| e.kind == EventKind::SqueezeEnd)
            .count();
        assert_eq!((begins, ends), (1, 1));

        // inside the corridor the width clamps to the corridor width
        for (p, width) in state.centerline.iter().zip(&state.local_width) {
            if p.x > 0.52 && p.x < 1.08 {
                assert_relative_eq!(*width, w, epsilon = 1e-9);
            }
            assert!(*width >= scenario.device_diameter - 1e-12);
            assert!(*width <= scenario.membrane_diameter + 1e-12);
        }
        // past the corridor the membrane reinflates exactly
        let tip_width = *state.local_width.last().unwrap();
        assert_eq!(tip_width, scenario.membrane_diameter);
    }

    #[test]
    fn slot_below_device_diameter_wedges_the_tip() {
        let scenario = PlanarScenario {
            walls: vec![
                Segment::new(0.5, 0.045, 0.5, 0.4),
                Segment::new(0.5, -0.045, 0.5, -0.4),
            ],
            start_position: Point::new(0.2, 0.0),
            start_heading: Vec2::new(1.0, 0.0),
            robot_body_length: 0.6,
            membrane_diameter: 0.137,
            device_diameter: 0.104,
            tip_speed: 0.061,
            goal_region: vec![
                Point::new(0.8, -0.2),
                Point::new(1.0, -0.2),
                Point::new(1.0, 0.2),
                Point::new(0.8, 0.2),
            ],
            max_sim_time: 30.0,
        };
        let (state, outcome) = run(&scenario).unwrap();
        assert_eq!(outcome, Outcome::Stuck);
        assert!(state.event_log.iter().any(|e| e.kind == EventKind::Stuck));
        assert!(state.tip().x < 0.5, "tip must not pass the slot");
    }

    #[test]
    fn laid_points_never_move_and_tail_retracts() {
        let scenario = open_field(Point::new(0.0, 0.0), Vec2::new(1.0, 0.0));
        let mut state = SimState::initial(&scenario);
        for _ in 0..100 {
            state = step(&scenario, &state, 0.1);
        }
        let snapshot = state.clone();
        for _ in 0..150 {
            state = step(&scenario, &state, 0.1);
        }
        assert!(state.first_point_ordinal > snapshot.first_point_ordinal);
        // overlap survivors are bit-identical
        for (i, p) in snapshot.centerline.iter().enumerate() {
            let ordinal = snapshot.first_point_ordinal + i;
            if ordinal >= state.first_point_ordinal {
                let j = ordinal - state.first_point_ordinal;
                if j < state.centerline.len() {
                    assert_eq!(p.x.to_bits(), state.centerline[j].x.to_bits());
                    assert_eq!(p.y.to_bits(), state.centerline[j].y.to_bits());
                }
            }
        }
        assert!(state.arc_length() <= scenario.robot_body_length + 1e-9);
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let scenario = PlanarScenario::maze_demo();
        let (a, oa) = run(&scenario).unwrap();
        let (b, ob) = run(&scenario).unwrap();
        assert_eq!(oa, ob);
        assert_eq!(a.event_log, b.event_log);
        assert_eq!(a.centerline.len(), b.centerline.len());
        for (p, q) in a.centerline.iter().zip(&b.centerline) {
            assert_eq!(p.x.to_bits(), q.x.to_bits());
            assert_eq!(p.y.to_bits(), q.y.to_bits());
        }
    }

    #[test]
    fn vertical_pipe_is_climbed_at_tip_speed() {
        let scenario = PlanarScenario::vertical_pipe_demo();
        let (state, outcome) = run(&scenario).unwrap();
        assert_eq!(outcome, Outcome::GoalReached);
        // squeezed to the pipe bore the whole way through
        assert!(state
            .event_log
            .iter()
            .any(|e| e.kind == EventKind::SqueezeBegin));
        let travel = 0.355 - (-0.15);
        let expected = pipe_climb_time(travel, scenario.tip_speed);
        assert_relative_eq!(state.elapsed, expected, epsilon = 0.02);
    }

    #[test]
    fn aperture_classification() {
        use AperturePassage::*;
        assert_eq!(aperture_check(0.11, 0.137, 0.104), PassSqueeze);
        assert_eq!(aperture_check(0.20, 0.137, 0.104), PassFree);
        assert_eq!(aperture_check(0.09, 0.137, 0.104), Blocked);
        assert_eq!(aperture_check(0.104, 0.137, 0.104), PassSqueeze);
        assert_eq!(aperture_check(0.137, 0.137, 0.104), PassFree);
    }

    #[test]
    fn climb_time_is_inverse_in_speed() {
        assert_relative_eq!(pipe_climb_time(0.305, 0.061), 5.0, epsilon = 1e-9);
        assert_relative_eq!(
            pipe_climb_time(0.305, 0.122),
            0.5 * pipe_climb_time(0.305, 0.061),
            max_relative = 1e-12
        );
        assert_eq!(pipe_climb_time(0.0, 0.061), 0.0);
    }

    #[test]
    fn scenario_validation_rejects_bad_inputs() {
        let mut s = PlanarScenario::maze_demo();
        s.device_diameter = 0.2;
        assert!(s.validate().is_err());

        let mut s = PlanarScenario::maze_demo();
        s.walls.push(Segment::new(0.1, -1.0, 0.1, 1.0)); // crosses the floor
        assert!(s.validate().is_err());

        let mut s = PlanarScenario::maze_demo();
        s.goal_region = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        assert!(s.validate().is_err());
    }
}
