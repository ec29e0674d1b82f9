//! Multisum vs theta-formula benchmark: the enumeration behind B_N is an
//! (N-1)-fold sum whose index count explodes with N, while the theta formula
//! is always an N^2-term double sum. Timings are reported only after the two
//! routes produce bit-identical series.

use qchain::cli::run_bench;

fn main() {
    let order = 40;
    println!("order {order}, best of 2 runs");
    println!("{:>3} {:>12} {:>12} {:>12} {:>12}", "N", "ms indices", "multisum ms", "theta terms", "theta ms");
    for n in 2..=6 {
        let r = run_bench(n, order, 2).expect("benchmark");
        assert_eq!(r.series_identical, Some(true));
        let best = |v: &Vec<f64>| v.iter().cloned().fold(f64::INFINITY, f64::min);
        println!(
            "{n:>3} {:>12} {:>12.2} {:>12} {:>12.2}",
            r.multisum_work.unwrap(),
            best(&r.multisum_ms.unwrap()),
            r.theta_terms,
            best(&r.theta_ms),
        );
    }

    // at N = 100 the multisum is refused outright; the theta route still runs
    let r = run_bench(100, order, 1).expect("theta still feasible");
    println!(
        "\nN = 100: theta route {} terms in {:.1} ms; multisum refused:\n  {}",
        r.theta_terms,
        r.theta_ms[0],
        r.multisum_refused.unwrap()
    );
}
