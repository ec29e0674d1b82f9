//! At N = 2 the multisum collapses to a single infinite product: parts
//! congruent to ±2, ±3, ±4, ±5 mod 16 (Slater's mod-16 product). Checked to
//! order 200, so the coefficients also count the restricted partitions.

use qchain::identities::{bn_multisum, slater_product, SLATER_RESIDUES};

fn main() {
    let order = 200;
    let multisum = bn_multisum(2, order);
    let product = slater_product(order);
    assert!(
        multisum.agrees_to(&product, order),
        "multisum and product differ: {:?}",
        multisum.first_difference(&product)
    );
    println!("B_2(q) = prod 1/(1-q^s) over s ≡ ±2,±3,±4,±5 (mod 16), verified to q^{order}");
    println!("allowed residues mod 16: {SLATER_RESIDUES:?}");
    println!("\nfirst coefficients (restricted partition counts):");
    for k in 0..=12 {
        println!("  q^{k:<3} {}", multisum.coeff_q(k).unwrap());
    }
}
