//! Theta symbols j(±q^a; q^m): quasi-periodic normalization into the
//! canonical range, product expansion, and cross-validation against the
//! independent triple-product-sum oracle on random symbols.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qchain::series::Sign;
use qchain::{expand_j, normalize_j, triple_product_oracle, JSymbol};

fn main() {
    // a negative argument exponent normalizes by a downward shift
    let raw = JSymbol::jbar(-2, 4);
    let n = normalize_j(&raw);
    println!("{raw} = {} · {}", n.prefactor, n.canonical);

    // the zero case: j(q^{km}; q^m) contains the factor 1 - 1
    let zero = JSymbol::big_j(6, 3);
    assert!(normalize_j(&zero).is_zero);
    println!("{zero} = 0 (argument is an integral power of the base)");

    // product expansion vs bilateral sum on random symbols
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let order = 60;
    for _ in 0..25 {
        let sym = JSymbol::new(
            if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus },
            rng.gen_range(-20..=20),
            rng.gen_range(1..=10),
        );
        let product = expand_j(&sym, order);
        let oracle = triple_product_oracle(&sym, order);
        assert!(
            product.agrees_to(&oracle, order),
            "oracle mismatch for {sym}"
        );
    }
    println!("product expansion ≡ triple-product sum on 25 random symbols (order {order})");

    // the argument inversion symmetry j(x; q) = j(q/x; q)
    for (sign, a, m) in [(Sign::Plus, 1, 5), (Sign::Minus, 2, 7)] {
        let lhs = expand_j(&JSymbol::new(sign, a, m), order);
        let rhs = expand_j(&JSymbol::new(sign, m - a, m), order);
        assert!(lhs.agrees_to(&rhs, order));
    }
    println!("argument inversion symmetry holds on spot checks");

    println!("\nj(q; q^3) = {}", expand_j(&JSymbol::big_j(1, 3), 25));
}
