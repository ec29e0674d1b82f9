//! B_N through the Hecke-type double sum:
//! q^{-m^2/4N}/(q)_inf^2 · f_{1,N+1,1}(q^{1+m/2}, q^{1-m/2}, q) for any m
//! divisible by 2N. The shifted substitutions all collapse to the same
//! series, which in turn matches the direct enumeration.

use qchain::identities::{bn_hecke, bn_multisum};

fn main() {
    let order = 40;
    for n in 2..=4 {
        let direct = bn_multisum(n, order);
        let via_f = bn_hecke(n, 0, order).expect("hecke route");
        assert!(via_f.agrees_to(&direct, order));
        println!("N = {n}: f_{{1,{},1}}(q, q, q)/(q)^2 = B_{n}  (order {order})", n + 1);
        // m-independence: shifting m by multiples of 2N changes nothing
        for m in [2 * n, 4 * n] {
            let shifted = bn_hecke(n, m, order).expect("shifted substitution");
            assert!(shifted.agrees_to(&direct, order));
            println!(
                "       m = {m}: q^{{-{}}} f_{{1,{},1}}(q^{}, q^{}, q)/(q)^2 unchanged",
                m * m / (4 * n),
                n + 1,
                1 + m / 2,
                1 - m / 2
            );
        }
    }
    // rejected when 2N does not divide m
    assert!(bn_hecke(2, 3, 10).is_err());
    println!("\nm not divisible by 2N is rejected, as it must be");
}
