use bohmlab_core::chaos::{bin_by_distance, stretching_series, DistanceKind, BIN_DELTA, WINDOW_DT};
use bohmlab_core::orbit::integrate_with_deviation;
use bohmlab_core::ModelParams;

fn main() {
    let p = ModelParams::reference();
    let traj = integrate_with_deviation(&p, -1.1, -1.1, 1.0, 0.0, 1000.0, 1e-10, 0.01).unwrap();
    let windows = stretching_series(&p, &traj, WINDOW_DT).unwrap();
    println!("windows: {}", windows.len());

    // encounter calibration vs the paper's Fig 9b
    for (lo, hi) in [(160.0, 166.0), (166.0, 172.0), (175.0, 176.5)] {
        let mut dmin = f64::INFINITY;
        let mut emin = f64::INFINITY;
        for w in windows.iter().filter(|w| w.t_i >= lo && w.t_i < hi) {
            if let Some(d) = w.d_min { dmin = dmin.min(d); }
            if let Some(e) = w.eps_min { emin = emin.min(e); }
        }
        println!("[{lo},{hi}): min d = {dmin:.3}, min eps = {emin:.3}");
    }

    let by_d = bin_by_distance(&windows, DistanceKind::XPoint, BIN_DELTA);
    println!("--- a(d) bins (d <= 0.4) ---");
    for b in by_d.iter().filter(|b| b.bin_center <= 0.4) {
        println!("d = {:.4}: mean = {:+.3} (n = {})", b.bin_center, b.mean_a, b.count);
    }
    println!("--- windows with d_min <= 0.25 ---");
    for w in windows.iter().filter(|w| w.d_min.map_or(false, |d| d <= 0.25)) {
        println!(
            "t = {:7.1}  a = {:+7.3}  d = {:.4}  eps = {:.3}  d0 = {:.3}",
            w.t_i, w.a_i, w.d_min.unwrap(), w.eps_min.unwrap_or(f64::NAN), w.d0_min.unwrap_or(f64::NAN)
        );
    }
}
