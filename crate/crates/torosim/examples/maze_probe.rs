use torosim::sim::{run_with_dt, EventKind, PlanarScenario};

fn main() {
    for (name, scenario) in [
        ("maze 0.11", PlanarScenario::maze_demo()),
        ("maze 0.09", PlanarScenario::maze_demo_with_aperture(0.09)),
        ("pipe", PlanarScenario::vertical_pipe_demo()),
    ] {
        for dt in [0.01, 0.005, 0.0025] {
            let (state, outcome) = run_with_dt(&scenario, dt).unwrap();
            let deflections = state
                .event_log
                .iter()
                .filter(|e| matches!(e.kind, EventKind::Deflection { .. }))
                .count();
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
            println!(
                "{name} dt={dt}: outcome={:?} t={:.2} tip=({:.4},{:.4}) deflections={deflections} squeeze={begins}/{ends} events={} clearance={:.4}",
                outcome,
                state.elapsed,
                state.tip().x,
                state.tip().y,
                state.event_log.len(),
                state.min_wall_clearance(&scenario.walls),
            );
        }
    }
    // walk the event sequence for the primary maze
    let (state, _) = run_with_dt(&PlanarScenario::maze_demo(), 0.01).unwrap();
    for e in &state.event_log {
        println!("  t={:.2} {:?}", e.time, e.kind);
    }
}
