//! Delay-line and switch timing for d-dimensional generation, checked by a
//! discrete-event simulation of every photon's path.
//!
//! Geometry: the cavity sits at one end of a straight path; switch `m`
//! (`m = 1..d-1`) is `τ₁ + (m-1)τ₂` away from it and the input/output port
//! another `τ₂` beyond the last switch. A reflective switch couples the path
//! to its delay loop; a transmissive one lets photons pass.
//!
//! Each cycle has `d` cavity slots centred at `cT + (j - ½)T/d`. Photon `k`
//! first reflects in slot `d` of cycle `k`. After its `r`-th reflection
//! (counting from 0) it is routed through line `r + 1` and reflects again in
//! slot `d - r - 1` of cycle `k + o_{r+1}`, where `o_m = N₁⋯N_m`. After the
//! reflection in slot 1 it leaves through the port.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::LatticeDims;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("a {0}-dimensional lattice needs no delay lines")]
    NoFeedback(usize),
    #[error("t_cycle must be finite and > 0, got {0}")]
    BadCycle(f64),
    #[error("propagation delay {name} = {value} ns must be in (0, t_cycle/(10d) = {limit}) ns")]
    TauTooLarge {
        name: &'static str,
        value: f64,
        limit: f64,
    },
    #[error("delay line {line} is too short for the switch geometry (loop length {length} ns)")]
    LineTooShort { line: usize, length: f64 },
    #[error("expected {expected} delay values, got {got}")]
    DelayCount { expected: usize, got: usize },
    #[error("switch {switch} has coinciding reflective and transmissive instants")]
    Infeasible { switch: usize },
}

/// `o_m = N₁⋯N_m` for `m = 0..d-1` (`o_0 = 0`).
fn cumulative_offsets(dims: &LatticeDims) -> Vec<usize> {
    let d = dims.dimension();
    let mut out = vec![0];
    let mut prod = 1;
    for &n in &dims.dims()[..d - 1] {
        prod *= n;
        out.push(prod);
    }
    out
}

/// Cavity-to-cavity duration of each delay line: `(gap_m - 1/d)·T` with
/// `gap_m = o_m - o_{m-1}`.
pub fn delay_lengths(dims: &LatticeDims, t_cycle: f64) -> Result<Vec<f64>, ScheduleError> {
    let d = dims.dimension();
    if d < 2 {
        return Err(ScheduleError::NoFeedback(d));
    }
    if !(t_cycle.is_finite() && t_cycle > 0.0) {
        return Err(ScheduleError::BadCycle(t_cycle));
    }
    let o = cumulative_offsets(dims);
    Ok((1..d)
        .map(|m| ((o[m] - o[m - 1]) as f64 - 1.0 / d as f64) * t_cycle)
        .collect())
}

/// Propagation delays (ns): cavity to first switch, and switch to switch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Taus {
    pub tau1: f64,
    pub tau2: f64,
}

impl Taus {
    pub fn default_for(t_cycle: f64) -> Self {
        Self {
            tau1: t_cycle / 100.0,
            tau2: t_cycle / 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SwitchState {
    Reflective,
    Transmissive,
}

/// Planned cavity reflection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArrivalEvent {
    pub time: f64,
    pub photon: usize,
    pub cycle: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    t_cycle: f64,
    d: usize,
    photons: usize,
    cycles: usize,
    offsets: Vec<usize>,
    delays: Vec<f64>,
    taus: Taus,
    /// Reflective intervals per switch (index `m - 1`), sorted and disjoint.
    windows: Vec<Vec<(f64, f64)>>,
    arrivals: Vec<ArrivalEvent>,
    pulses: Vec<f64>,
}

impl Schedule {
    pub fn t_cycle(&self) -> f64 {
        self.t_cycle
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// Cycles needed for every photon to finish.
    pub fn cycles(&self) -> usize {
        self.cycles
    }

    pub fn delays(&self) -> &[f64] {
        &self.delays
    }

    pub fn taus(&self) -> Taus {
        self.taus
    }

    pub fn arrival_events(&self) -> &[ArrivalEvent] {
        &self.arrivals
    }

    /// Times of the π/2 control pulses on the spin, one per cycle.
    pub fn pulse_times(&self) -> &[f64] {
        &self.pulses
    }

    /// Distance of switch `m` from the cavity.
    pub fn switch_position(&self, m: usize) -> f64 {
        self.taus.tau1 + (m - 1) as f64 * self.taus.tau2
    }

    pub fn port_position(&self) -> f64 {
        self.switch_position(self.d - 1) + self.taus.tau2
    }

    /// Round-trip time inside loop `m`, excluding the path to the cavity.
    pub fn loop_length(&self, m: usize) -> f64 {
        self.delays[m - 1] - 2.0 * self.switch_position(m)
    }

    /// Centre of slot `j` in cycle `c`.
    pub fn slot_centre(&self, cycle: usize, slot: usize) -> f64 {
        slot_centre(self.t_cycle, self.d, cycle, slot)
    }

    pub fn switch_state(&self, m: usize, t: f64) -> SwitchState {
        let w = &self.windows[m - 1];
        let i = w.partition_point(|&(start, _)| start <= t);
        if i > 0 && t <= w[i - 1].1 {
            SwitchState::Reflective
        } else {
            SwitchState::Transmissive
        }
    }

    /// Switch transitions as `(time, switch, new state)`, time-ordered.
    pub fn switch_events(&self) -> Vec<(f64, usize, SwitchState)> {
        let mut out: Vec<_> = self
            .windows
            .iter()
            .enumerate()
            .flat_map(|(i, w)| {
                w.iter().flat_map(move |&(a, b)| {
                    [
                        (a, i + 1, SwitchState::Reflective),
                        (b, i + 1, SwitchState::Transmissive),
                    ]
                })
            })
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }

    /// Time from injection to exit for a photon that completes all lines.
    pub fn dwell_time(&self) -> f64 {
        self.delays.iter().sum::<f64>() + 2.0 * self.port_position()
    }

    /// Every planned event as `(time_ns, entity, event)`, time-ordered.
    pub fn timeline(&self) -> Vec<TimelineEvent> {
        let mut out = Vec::new();
        for (t, m, state) in self.switch_events() {
            let event = match state {
                SwitchState::Reflective => "reflective",
                SwitchState::Transmissive => "transmissive",
            };
            out.push(TimelineEvent {
                time: t,
                entity: format!("switch {m}"),
                event: event.into(),
            });
        }
        for a in &self.arrivals {
            out.push(TimelineEvent {
                time: a.time,
                entity: format!("photon {}", a.photon),
                event: format!("cavity cycle {} slot {}", a.cycle, a.slot),
            });
        }
        for &t in &self.pulses {
            out.push(TimelineEvent {
                time: t,
                entity: "spin".into(),
                event: "pi/2 pulse".into(),
            });
        }
        out.sort_by(|a, b| {
            a.time
                .total_cmp(&b.time)
                .then_with(|| a.entity.cmp(&b.entity))
        });
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimelineEvent {
    pub time: f64,
    pub entity: String,
    pub event: String,
}

fn slot_centre(t_cycle: f64, d: usize, cycle: usize, slot: usize) -> f64 {
    cycle as f64 * t_cycle + (slot as f64 - 0.5) * t_cycle / d as f64
}

/// Schedule with the closed-form delay lengths.
pub fn build_schedule(
    dims: &LatticeDims,
    t_cycle: f64,
    taus: Taus,
) -> Result<Schedule, ScheduleError> {
    let delays = delay_lengths(dims, t_cycle)?;
    build_schedule_with_delays(dims, t_cycle, taus, &delays)
}

/// Schedule whose loops and switch windows follow the given line delays.
/// With delays other than [`delay_lengths`] the result is self-consistent
/// but generally invalid, which [`validate_schedule`] reports.
pub fn build_schedule_with_delays(
    dims: &LatticeDims,
    t_cycle: f64,
    taus: Taus,
    delays: &[f64],
) -> Result<Schedule, ScheduleError> {
    let d = dims.dimension();
    if d < 2 {
        return Err(ScheduleError::NoFeedback(d));
    }
    if !(t_cycle.is_finite() && t_cycle > 0.0) {
        return Err(ScheduleError::BadCycle(t_cycle));
    }
    if delays.len() != d - 1 {
        return Err(ScheduleError::DelayCount {
            expected: d - 1,
            got: delays.len(),
        });
    }
    let limit = t_cycle / (10.0 * d as f64);
    for (name, value) in [("tau1", taus.tau1), ("tau2", taus.tau2)] {
        if !(value > 0.0 && value < limit) {
            return Err(ScheduleError::TauTooLarge { name, value, limit });
        }
    }
    let offsets = cumulative_offsets(dims);
    let photons = dims.photon_count();
    let o_max = *offsets.last().expect("d >= 2");
    let mut schedule = Schedule {
        t_cycle,
        d,
        photons,
        cycles: photons + o_max,
        offsets,
        delays: delays.to_vec(),
        taus,
        windows: vec![Vec::new(); d - 1],
        arrivals: Vec::new(),
        pulses: Vec::new(),
    };
    for m in 1..d {
        let length = schedule.loop_length(m);
        if !(length > 0.0) {
            return Err(ScheduleError::LineTooShort { line: m, length });
        }
    }

    // Reflective and must-transmit instants per switch from the planned paths.
    let mut reflect: Vec<Vec<f64>> = vec![Vec::new(); d - 1];
    let mut transmit: Vec<Vec<f64>> = vec![Vec::new(); d - 1];
    for k in 1..=photons {
        let times = planned_reflections(&schedule, k);
        for (r, &t) in times.iter().enumerate() {
            schedule.arrivals.push(ArrivalEvent {
                time: slot_centre(t_cycle, d, k + schedule.offsets[r], d - r),
                photon: k,
                cycle: k + schedule.offsets[r],
                slot: d - r,
            });
            if r == 0 {
                for j in 1..d {
                    transmit[j - 1].push(t - schedule.switch_position(j));
                }
            }
            if r + 1 < d {
                let m = r + 1;
                for j in 1..m {
                    transmit[j - 1].push(t + schedule.switch_position(j));
                    transmit[j - 1].push(times[r + 1] - schedule.switch_position(j));
                }
                reflect[m - 1].push(t + schedule.switch_position(m));
                reflect[m - 1].push(times[r + 1] - schedule.switch_position(m));
            } else {
                for j in 1..d {
                    transmit[j - 1].push(t + schedule.switch_position(j));
                }
            }
        }
    }

    let mut min_gap = f64::INFINITY;
    for m in 0..d - 1 {
        transmit[m].sort_by(f64::total_cmp);
        for &r in &reflect[m] {
            let i = transmit[m].partition_point(|&p| p < r);
            for p in transmit[m]
                .get(i.wrapping_sub(1))
                .into_iter()
                .chain(transmit[m].get(i))
            {
                min_gap = min_gap.min((p - r).abs());
            }
        }
        if min_gap <= 0.0 {
            return Err(ScheduleError::Infeasible { switch: m + 1 });
        }
    }
    let h = if min_gap.is_finite() {
        (min_gap / 4.0).min(t_cycle / (4.0 * d as f64))
    } else {
        t_cycle / (4.0 * d as f64)
    };
    for (m, instants) in reflect.iter_mut().enumerate() {
        instants.sort_by(f64::total_cmp);
        let w = &mut schedule.windows[m];
        for &r in instants.iter() {
            match w.last_mut() {
                Some(last) if r - h <= last.1 => last.1 = r + h,
                _ => w.push((r - h, r + h)),
            }
        }
    }
    schedule.arrivals.sort_by(|a, b| a.time.total_cmp(&b.time));
    schedule.pulses = (1..=schedule.cycles)
        .map(|c| slot_centre(t_cycle, d, c, d) + t_cycle / (4.0 * d as f64))
        .collect();
    Ok(schedule)
}

/// Cavity times of photon `k`'s reflections when it follows the lines.
fn planned_reflections(s: &Schedule, k: usize) -> Vec<f64> {
    let mut t = slot_centre(s.t_cycle, s.d, k, s.d);
    let mut out = vec![t];
    for &delay in &s.delays {
        t += delay;
        out.push(t);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// Two photons at the cavity less than one slot apart.
    Collision,
    /// A reflection outside its planned cycle and slot.
    WrongSlot,
    /// A photon stuck in, or sent into, the wrong loop.
    Misrouted,
    /// A photon leaving before all its reflections.
    PrematureExit,
    /// A control pulse too close to a photon at the cavity.
    PulseTiming,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub time: f64,
    pub photons: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub cycles: usize,
    pub reflections: usize,
    pub exited: usize,
    pub in_flight: usize,
    /// Largest deviation of an exit from the nominal dwell time (ns).
    pub dwell_error: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Place {
    Cavity,
    /// Switch, reached along the main path; `outward` is away from the cavity.
    Switch {
        m: usize,
        outward: bool,
    },
    /// Switch, reached from inside its loop.
    LoopEnd {
        m: usize,
        laps: usize,
    },
    Port,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Event {
    time: f64,
    seq: usize,
    photon: usize,
    place: Place,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (time, seq)
        other
            .time
            .total_cmp(&self.time)
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Simulate photons injected in cycles `1..=min(horizon, K)` until the end
/// of cycle `min(horizon, K + o_max)` and check every cavity interaction.
/// Photons still inside the apparatus at the end are not violations.
pub fn validate_schedule(s: &Schedule, horizon: usize) -> ValidationReport {
    let last_cycle = horizon.min(s.cycles);
    let t_end = (last_cycle + 1) as f64 * s.t_cycle;
    let slot = s.t_cycle / s.d as f64;
    let tol = 1e-9 * s.t_cycle;

    let mut heap = BinaryHeap::new();
    let mut seq = 0;
    let mut push = |heap: &mut BinaryHeap<Event>, time: f64, photon: usize, place: Place| {
        seq += 1;
        heap.push(Event {
            time,
            seq,
            photon,
            place,
        });
    };
    let mut injected = vec![f64::NAN; s.photons + 1];
    for k in 1..=s.photons.min(last_cycle) {
        let t = s.slot_centre(k, s.d) - s.port_position();
        injected[k] = t;
        push(
            &mut heap,
            t + s.taus.tau2,
            k,
            Place::Switch {
                m: s.d - 1,
                outward: false,
            },
        );
    }

    let mut reflections: Vec<Vec<f64>> = vec![Vec::new(); s.photons + 1];
    let mut cavity_log: Vec<(f64, usize)> = Vec::new();
    let mut violations = Vec::new();
    let mut exited = 0;
    let mut in_flight = 0;
    let mut dwell_error: f64 = 0.0;
    let tau2 = s.taus.tau2;
    // next place when moving along the main path from switch m
    let step_in = |m: usize| {
        if m == 1 {
            (s.taus.tau1, Place::Cavity)
        } else {
            (
                tau2,
                Place::Switch {
                    m: m - 1,
                    outward: false,
                },
            )
        }
    };
    let step_out = |m: usize| {
        if m + 1 == s.d {
            (tau2, Place::Port)
        } else {
            (
                tau2,
                Place::Switch {
                    m: m + 1,
                    outward: true,
                },
            )
        }
    };

    while let Some(ev) = heap.pop() {
        if ev.time > t_end {
            in_flight += 1 + heap.len();
            break;
        }
        let k = ev.photon;
        match ev.place {
            Place::Cavity => {
                reflections[k].push(ev.time);
                cavity_log.push((ev.time, k));
                push(
                    &mut heap,
                    ev.time + s.taus.tau1,
                    k,
                    Place::Switch {
                        m: 1,
                        outward: true,
                    },
                );
            }
            Place::Switch { m, outward } => {
                if s.switch_state(m, ev.time) == SwitchState::Reflective {
                    if !outward {
                        violations.push(Violation {
                            kind: ViolationKind::Misrouted,
                            time: ev.time,
                            photons: vec![k],
                            detail: format!("diverted into line {m} on the way in"),
                        });
                    }
                    push(
                        &mut heap,
                        ev.time + s.loop_length(m),
                        k,
                        Place::LoopEnd { m, laps: 1 },
                    );
                } else {
                    let (dt, next) = if outward { step_out(m) } else { step_in(m) };
                    push(&mut heap, ev.time + dt, k, next);
                }
            }
            Place::LoopEnd { m, laps } => {
                if s.switch_state(m, ev.time) == SwitchState::Reflective {
                    let (dt, next) = step_in(m);
                    push(&mut heap, ev.time + dt, k, next);
                } else if laps >= 2 {
                    violations.push(Violation {
                        kind: ViolationKind::Misrouted,
                        time: ev.time,
                        photons: vec![k],
                        detail: format!("trapped in line {m}"),
                    });
                } else {
                    push(
                        &mut heap,
                        ev.time + s.loop_length(m),
                        k,
                        Place::LoopEnd { m, laps: laps + 1 },
                    );
                }
            }
            Place::Port => {
                exited += 1;
                if reflections[k].len() < s.d {
                    violations.push(Violation {
                        kind: ViolationKind::PrematureExit,
                        time: ev.time,
                        photons: vec![k],
                        detail: format!("{} of {} reflections", reflections[k].len(), s.d),
                    });
                } else {
                    dwell_error = dwell_error.max((ev.time - injected[k] - s.dwell_time()).abs());
                }
            }
        }
    }

    for (k, times) in reflections.iter().enumerate().skip(1) {
        for (r, &t) in times.iter().enumerate() {
            let planned = (r < s.d).then(|| (k + s.offsets[r], s.d - r));
            let ok = planned.is_some_and(|(c, j)| (t - s.slot_centre(c, j)).abs() <= tol);
            if !ok {
                violations.push(Violation {
                    kind: ViolationKind::WrongSlot,
                    time: t,
                    photons: vec![k],
                    detail: match planned {
                        Some((c, j)) => format!("reflection {r} planned for cycle {c} slot {j}"),
                        None => format!("unplanned reflection {r}"),
                    },
                });
            }
        }
    }

    cavity_log.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in cavity_log.windows(2) {
        if pair[1].0 - pair[0].0 < slot - tol {
            violations.push(Violation {
                kind: ViolationKind::Collision,
                time: pair[1].0,
                photons: vec![pair[0].1, pair[1].1],
                detail: format!("{:.4} ns apart", pair[1].0 - pair[0].0),
            });
        }
    }

    for &p in s.pulses.iter().take_while(|&&p| p <= t_end) {
        let i = cavity_log.partition_point(|&(t, _)| t < p);
        for &(t, k) in cavity_log
            .get(i.wrapping_sub(1))
            .into_iter()
            .chain(cavity_log.get(i))
        {
            if (t - p).abs() < slot / 8.0 {
                violations.push(Violation {
                    kind: ViolationKind::PulseTiming,
                    time: p,
                    photons: vec![k],
                    detail: format!("photon at cavity {:.4} ns from pulse", (t - p).abs()),
                });
            }
        }
    }

    violations.sort_by(|a, b| a.time.total_cmp(&b.time));
    ValidationReport {
        cycles: last_cycle,
        reflections: cavity_log.len(),
        exited,
        in_flight,
        dwell_error,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dims(d: &[usize]) -> LatticeDims {
        LatticeDims::full(d.to_vec()).unwrap()
    }

    #[test]
    fn delay_examples() {
        let d = delay_lengths(&dims(&[2, 2, 4]), 1.0).unwrap();
        assert_relative_eq!(d[0], 5.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(d[1], 5.0 / 3.0, epsilon = 1e-15);
        let d = delay_lengths(&dims(&[3, 2, 4]), 1.0).unwrap();
        assert_relative_eq!(d[0], 8.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(d[1], 8.0 / 3.0, epsilon = 1e-15);
        assert_eq!(
            delay_lengths(&dims(&[2, 2, 2, 4]), 1.0).unwrap(),
            vec![1.75, 1.75, 3.75]
        );
        assert_eq!(
            delay_lengths(&dims(&[5]), 1.0),
            Err(ScheduleError::NoFeedback(1))
        );
    }

    #[test]
    fn slot_occupancy_for_cube() {
        let s = build_schedule(&dims(&[2, 2, 2]), 5.0, Taus::default_for(5.0)).unwrap();
        let in_cycle = |c: usize| {
            let mut v: Vec<_> = s
                .arrival_events()
                .iter()
                .filter(|a| a.cycle == c)
                .map(|a| (a.photon, a.slot))
                .collect();
            v.sort_by_key(|&(_, slot)| slot);
            v
        };
        assert_eq!(in_cycle(6), vec![(2, 1), (4, 2), (6, 3)]);
        assert_eq!(in_cycle(1), vec![(1, 3)]);
        assert_eq!(in_cycle(2), vec![(2, 3)]);
        assert!(validate_schedule(&s, 40).passed());
    }

    #[test]
    fn two_dimensional_case() {
        let s = build_schedule(&dims(&[3, 4]), 5.0, Taus::default_for(5.0)).unwrap();
        let report = validate_schedule(&s, 40);
        assert!(report.passed(), "{:?}", report.violations);
        assert!(s
            .arrival_events()
            .iter()
            .any(|a| a.cycle == 5 && a.photon == 2 && a.slot == 1));
    }

    #[test]
    fn large_taus_rejected() {
        let err = build_schedule(
            &dims(&[2, 2, 2]),
            5.0,
            Taus {
                tau1: 0.2,
                tau2: 0.01,
            },
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ScheduleError::TauTooLarge { name: "tau1", .. }
        ));
    }

    #[test]
    fn perturbed_delays_collide() {
        let d = dims(&[2, 2, 8]);
        let delays: Vec<f64> = delay_lengths(&d, 5.0)
            .unwrap()
            .iter()
            .map(|x| x + 2.5)
            .collect();
        let s = build_schedule_with_delays(&d, 5.0, Taus::default_for(5.0), &delays).unwrap();
        let report = validate_schedule(&s, 40);
        assert!(report.count(ViolationKind::Collision) > 0);
    }

    #[test]
    fn dwell_time_matches_simulation() {
        let s = build_schedule(&dims(&[2, 3, 3]), 5.0, Taus::default_for(5.0)).unwrap();
        let report = validate_schedule(&s, 100);
        assert!(report.passed());
        assert_eq!(report.exited, 18);
        assert!(report.dwell_error < 1e-9);
        assert_relative_eq!(
            s.dwell_time(),
            (6.0 - 2.0 / 3.0) * 5.0 + 2.0 * 0.15,
            epsilon = 1e-12
        );
    }
}
