//! The headline identity: the chain-ring multisum B_N(q) equals a sum of N^2
//! products of quotients of theta functions, divided by
//! (q)_inf^2 Jbar_{0,N(N+2)}. The two sides are computed by completely
//! independent code paths and compared coefficient by coefficient.

use std::time::Instant;

use qchain::identities::{bn_multisum, bn_theta};

fn main() {
    let order = 40;
    let mut all_ok = true;
    for n in 2..=5 {
        let t0 = Instant::now();
        let multisum = bn_multisum(n, order);
        let t_multi = t0.elapsed();
        let t0 = Instant::now();
        let theta = bn_theta(n, order).expect("theta route");
        let t_theta = t0.elapsed();
        let ok = multisum.agrees_to(&theta, order);
        all_ok &= ok;
        println!(
            "N = {n}: multisum ({:>7.1?}) vs {}-term theta formula ({:>7.1?}) ... {}",
            t_multi,
            n * n,
            t_theta,
            if ok { "equal" } else { "DIFFER" }
        );
    }
    println!("\nB_2 through q^16: {}", bn_multisum(2, 16));
    assert!(all_ok, "identity verification failed");
}
