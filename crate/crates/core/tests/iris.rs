use credal::io::load_bundled;
use credal::{derive, ecm_fit, nonspecificity, Prototypes, SolverParams};

const REFERENCE_CENTERS: [[f64; 4]; 3] = [
    [7.06131634, 3.03675091, 6.05972886, 2.1474559],
    [4.96375502, 3.3462016, 1.49213248, 0.24695422],
    [6.01335287, 2.76720722, 4.77762377, 1.64225065],
];

#[test]
fn iris_ecm_matches_published_run() {
    let data = load_bundled("iris").unwrap();
    let x = data.attributes().unwrap();
    let params = SolverParams { ntrials: 5, ..SolverParams::default() };
    let p = ecm_fit(x, 3, &params).unwrap();
    let j = p.criterion();
    let n = nonspecificity(&p);
    println!("criterion {j} nonspecificity {n} iterations {}", p.diagnostics().iterations);
    assert!((38.0..=40.0).contains(&j));
    assert!((n - 0.22).abs() <= 0.05);
    assert!(derive(&p).outliers.is_empty());
    let Some(Prototypes::Centers(v)) = p.prototypes() else { panic!("no centers") };
    for r in REFERENCE_CENTERS {
        let best = v
            .iter()
            .map(|row| row.iter().zip(r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min);
        assert!(best < 0.25, "no prototype near {r:?}: {v:?}");
    }
}
