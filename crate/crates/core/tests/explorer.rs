use ngmzi::explorer::{
    evaluate, figure, linspace, optimize_tau, run_grid, run_grid_with, run_sweep, run_sweep_with,
    Axis, Execution, Fixed, Flag, GridSpec, Objective, Preset, SweepSpec, TauObjective,
    COARSE_POINTS, TAU_MARGIN,
};
use ngmzi::output::to_csv;
use rayon::prelude::*;

fn small_grid() -> GridSpec {
    GridSpec {
        r_range: (0.0, 1.5),
        tau_range: (0.0, 1.0),
        r_points: 7,
        tau_points: 6,
        phi: 0.01,
        dx: 2.0,
        dp: 2.0,
        state: (1, 1),
    }
}

#[test]
fn parallel_and_serial_sweeps_are_identical() {
    let Some(Preset::Sweep(spec)) = figure("3c") else {
        panic!()
    };
    let par = to_csv(&run_sweep_with(&spec, Execution::Parallel).unwrap());
    let ser = to_csv(&run_sweep_with(&spec, Execution::Serial).unwrap());
    assert_eq!(par, ser);
    assert_eq!(par, to_csv(&run_sweep(&spec).unwrap()));
}

#[test]
fn parallel_and_serial_grids_are_identical() {
    let spec = small_grid();
    let par = to_csv(&run_grid_with(&spec, Execution::Parallel).unwrap());
    let ser = to_csv(&run_grid_with(&spec, Execution::Serial).unwrap());
    assert_eq!(par, ser);
}

#[test]
fn grid_cells_equal_single_point_evaluation() {
    let spec = small_grid();
    let rows = run_grid(&spec).unwrap();
    assert_eq!(rows.len(), spec.r_points * spec.tau_points);
    for row in &rows {
        let single = evaluate((row.m, row.n), row.r, row.tau, row.phi, row.dx, row.dp).unwrap();
        assert_eq!(to_csv(std::slice::from_ref(row)), to_csv(&[single]));
    }
}

#[test]
fn undefined_points_are_flagged_not_fatal() {
    // Nothing leaks into the ancilla at tau = 1, so subtraction never fires.
    let rec = evaluate((0, 1), 0.5, 1.0, 0.01, 2.0, 2.0).unwrap();
    assert!(rec.has(Flag::Undefined));
    assert!(rec.delta_phi.is_nan() && rec.d().is_none());
    assert_eq!(rec.p_ng, 0.0);
}

#[test]
fn sweep_rows_follow_state_then_axis_order() {
    let spec = SweepSpec {
        axis: Axis::Phi,
        range: (0.01, 0.2),
        points: 4,
        fixed: Fixed::default(),
        states: vec![(0, 2), (2, 0)],
    };
    let rows = run_sweep(&spec).unwrap();
    let phis = linspace(spec.range, spec.points);
    assert_eq!(rows.len(), 8);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!((row.m, row.n), spec.states[i / 4]);
        assert_eq!(row.phi, phis[i % 4]);
    }
}

#[test]
fn subtraction_gain_peaks_at_the_upper_edge() {
    let opt = optimize_tau((0, 1), 0.5, 0.01, 2.0, 2.0, Objective::D).unwrap();
    assert_eq!(opt.flags, vec![Flag::Boundary]);
    assert_eq!(opt.tau, 1.0 - TAU_MARGIN);
}

#[test]
fn refined_optimum_matches_dense_scan() {
    let obj = TauObjective::new((0, 1), 0.5, 0.01, 2.0, 2.0, Objective::PxD).unwrap();
    let opt = optimize_tau((0, 1), 0.5, 0.01, 2.0, 2.0, Objective::PxD).unwrap();
    assert!(opt.flags.is_empty(), "{:?}", opt.flags);

    let coarse = linspace((TAU_MARGIN, 1.0 - TAU_MARGIN), COARSE_POINTS);
    let coarse_best = coarse
        .iter()
        .filter_map(|&t| obj.eval(t).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(opt.value >= coarse_best);

    let dense = linspace((TAU_MARGIN, 1.0 - TAU_MARGIN), 10_000);
    let (tau_star, best) = dense
        .par_iter()
        .map(|&t| (t, obj.eval(t).unwrap().unwrap_or(f64::NEG_INFINITY)))
        .reduce(
            || (0.0, f64::NEG_INFINITY),
            |a, b| if b.1 > a.1 { b } else { a },
        );
    let spacing = coarse[1] - coarse[0];
    assert!(
        (opt.tau - tau_star).abs() <= spacing,
        "{} vs {tau_star}",
        opt.tau
    );
    assert!((opt.value - best).abs() < 1e-8, "{} vs {best}", opt.value);
}

#[test]
fn catalysis_objective_is_flagged_multimodal() {
    // Maxima at tau -> 0 and a weaker one at tau -> 1 where D is slightly negative.
    let opt = optimize_tau((1, 1), 0.5, 0.01, 2.0, 2.0, Objective::D).unwrap();
    assert!(opt.flags.contains(&Flag::Multimodal) && opt.flags.contains(&Flag::Fallback));
    assert_eq!(opt.tau, TAU_MARGIN);
}

#[test]
fn addition_beats_higher_orders_at_weak_squeezing() {
    let Some(Preset::Sweep(mut spec)) = figure("2b") else {
        panic!()
    };
    spec.range = (0.1, 1.0);
    spec.points = 10;
    let rows = run_sweep(&spec).unwrap();
    let per_state = spec.points;
    for i in 0..per_state {
        let (a, b, c) = (&rows[i], &rows[i + per_state], &rows[i + 2 * per_state]);
        assert_eq!((a.m, b.m, c.m), (1, 2, 3));
        assert!(
            a.delta_phi > b.delta_phi && b.delta_phi > c.delta_phi,
            "r = {}: {} {} {}",
            a.r,
            a.delta_phi,
            b.delta_phi,
            c.delta_phi
        );
    }
}

#[test]
fn every_figure_preset_is_valid() {
    for id in ngmzi::explorer::FIGURES {
        match figure(id).unwrap() {
            Preset::Sweep(s) => s.validate().unwrap(),
            Preset::Grid(g) => g.validate().unwrap(),
        }
    }
    assert!(figure("7").is_none() && figure("2d").is_none());
}

#[test]
fn single_addition_beats_single_subtraction_and_catalysis() {
    let best = |s| {
        optimize_tau(s, 0.5, 0.01, 2.0, 2.0, Objective::PxD)
            .unwrap()
            .value
    };
    let pa = best((1, 0));
    assert!(pa > best((0, 1)) && pa > best((1, 1)));
}
