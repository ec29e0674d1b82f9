//! Level-N string functions as the bridge between the multisum and the Hecke
//! series: B_N(q) = q^{-m^2/4N} (q)_inf C^N_{m,0}(q) for m divisible by 2N,
//! and (q)_inf^3 C^N_{m,0} = f_{1,N+1,1}(q^{1+m/2}, q^{1-m/2}, q).

use qchain::hecke::{hecke_f, HeckeParams};
use qchain::identities::{bn_multisum, cartan_inverse, string_function, StringParams};
use qchain::series::{euler_product, Exponent, Monomial, Sign};

fn main() {
    let order = 30;
    println!("inverse Cartan matrix of A_3 (entries min(i,j) - ij/4):");
    for row in cartan_inverse(4) {
        let rendered: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        println!("  [{}]", rendered.join(", "));
    }
    println!();

    for n in 2..=4 {
        for m in [0, 2 * n] {
            let shift = Exponent::new(-m * m, 4 * n);
            let extra = (-shift.floor().to_integer()).max(0);
            let c = string_function(&StringParams { level: n, m, ell: 0 }, order + extra)
                .expect("string function");
            let bridged = c
                .mul(&euler_product(order + extra))
                .mul_monomial(&Monomial::new(Sign::Plus, shift))
                .truncate_to(order)
                .reduce_scale();
            let direct = bn_multisum(n, order);
            assert!(
                bridged.agrees_to(&direct, order),
                "bridge fails at N={n}, m={m}"
            );
            println!("q^{{-{}^2/{}}} (q)_inf C^{n}_{{{m},0}} = B_{n}   (order {order})", m, 4 * n);
        }
    }

    // the Hecke-series form of the same string function
    for (n, m) in [(2, 0), (3, 6)] {
        let c = string_function(&StringParams { level: n, m, ell: 0 }, order).expect("string");
        let e = euler_product(order);
        let lhs = c.mul(&e.mul(&e).mul(&e)).truncate_to(order - 1).reduce_scale();
        let f = hecke_f(
            &HeckeParams::new(
                1,
                n + 1,
                1,
                Monomial::q_power(1 + m / 2),
                Monomial::q_power(1 - m / 2),
            ),
            order - 1,
        )
        .expect("truncatable");
        assert!(lhs.agrees_to(&f, order - 1));
        println!("(q)_inf^3 C^{n}_{{{m},0}} = f_{{1,{},1}}(q^{}, q^{}, q)", n + 1, 1 + m / 2, 1 - m / 2);
    }
}
