//! The headline series: the chain-ring multisum `B_N(q)` by brute-force
//! enumeration, by the Hecke-series route and by the theta-quotient formula;
//! level-N string functions; the mod-16 Slater product; and the
//! Andrews-Gordon identities. Each is an independent code path so the
//! verification suites can cross-check them coefficient by coefficient.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::hecke::{hecke_f, HeckeParams};
use crate::series::{
    euler_product, Coeff, Exponent, Monomial, Sign, TruncSeries,
};
use crate::theta::{JSymbol, QuotientTerm};

fn binom2(r: i128) -> i128 {
    r * (r - 1) / 2
}

/// Table of `1/(q; q)_k` for `k = 0..=kmax`, truncated modulo `q^{order+1}`.
///
/// Built incrementally: `1/(q)_k = 1/(q)_{k-1} · (1 + q^k + q^{2k} + ...)`.
fn inverse_pochhammer_table(kmax: usize, order: i64) -> Vec<TruncSeries> {
    let mut table = Vec::with_capacity(kmax + 1);
    table.push(TruncSeries::one(order));
    for k in 1..=kmax as i64 {
        let mut geo: BTreeMap<i64, Coeff> = BTreeMap::new();
        let mut e = 0;
        while e <= order {
            geo.insert(e, Coeff::one());
            e += k;
        }
        let geo = TruncSeries::from_map(1, &geo, order);
        table.push(table.last().unwrap().mul(&geo));
    }
    table
}

// ----------------------------------------------------------------------
// the multisum route
// ----------------------------------------------------------------------

/// A multisum index: the nondecreasing partial sums `K_2 <= ... <= K_N`
/// (`K_1 = 0`), together with the difference sequence `k_j = K_j - K_{j-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisumIndex {
    /// `K_2, ..., K_N`, nondecreasing and nonnegative.
    pub upper: Vec<i64>,
}

impl MultisumIndex {
    pub fn new(upper: Vec<i64>) -> Self {
        assert!(upper.windows(2).all(|w| w[0] <= w[1]), "K must be nondecreasing");
        assert!(upper.first().map_or(true, |&k| k >= 0));
        MultisumIndex { upper }
    }

    /// The summand weights `k_j = K_j - K_{j-1}` for `j = 2..=N`.
    pub fn diffs(&self) -> Vec<i64> {
        let mut prev = 0;
        self.upper
            .iter()
            .map(|&k| {
                let d = k - prev;
                prev = k;
                d
            })
            .collect()
    }

    pub fn sum(&self) -> i64 {
        self.upper.iter().sum()
    }

    /// Divisibility condition `N | K_2 + ... + K_N`.
    pub fn is_admissible(&self, n: i64) -> bool {
        self.sum() % n == 0
    }

    /// Exponent `Q(K) = sum K_i^2 - (sum K_i)^2 / N` (requires admissibility).
    pub fn exponent(&self, n: i64) -> i64 {
        assert!(self.is_admissible(n));
        let s: i128 = self.sum() as i128;
        let sq: i128 = self.upper.iter().map(|&k| (k as i128) * (k as i128)).sum();
        let q = sq - s * s / (n as i128);
        debug_assert!(s * s % (n as i128) == 0);
        q.try_into().expect("multisum exponent overflow")
    }

    /// The same exponent recomputed from the difference sequence by first
    /// rebuilding `K_i = k_2 + ... + k_i` — exercises the K/k bookkeeping.
    pub fn exponent_from_diffs(&self, n: i64) -> i64 {
        let mut acc = 0i64;
        let rebuilt: Vec<i64> = self
            .diffs()
            .iter()
            .map(|&d| {
                acc += d;
                acc
            })
            .collect();
        MultisumIndex::new(rebuilt).exponent(n)
    }
}

struct MultisumDfs<'a> {
    n: i64,
    order: i64,
    prune_order: i64,
    inv_poch: &'a [TruncSeries],
    acc: TruncSeries,
    work: u64,
    collect: Option<Vec<MultisumIndex>>,
    stack: Vec<i64>,
}

impl MultisumDfs<'_> {
    /// `pair_sq` is `sum over fixed pairs (K_i - K_j)^2` including `K_1 = 0`;
    /// together with `(N - cnt)` unfixed slots bounded below by the last
    /// fixed value, `(pair_sq + remaining·K_last^2)/N` is a lower bound for
    /// the final exponent.
    fn descend(&mut self, depth: i64, last: i64, sum: i128, pair_sq: i128, product: &TruncSeries) {
        let n = self.n;
        if depth > n {
            self.work += 1;
            if sum % n as i128 != 0 {
                return;
            }
            let q_exp = pair_sq / n as i128;
            debug_assert_eq!(pair_sq % n as i128, 0);
            if q_exp > self.order as i128 {
                return;
            }
            let term = product.mul_monomial(&Monomial::q_power(q_exp as i64));
            self.acc = self.acc.add(&term.truncate_to(self.order));
            if let Some(list) = &mut self.collect {
                list.push(MultisumIndex::new(self.stack.clone()));
            }
            return;
        }
        let fixed = depth - 1; // count of fixed values including K_1 = 0
        let mut value = last;
        loop {
            // adding `value`: new pair contributions against all fixed entries
            let delta: i128 = self.stack.iter().map(|&k| {
                let d = (value - k) as i128;
                d * d
            }).sum::<i128>()
                + (value as i128) * (value as i128); // pair with K_1 = 0
            let new_pair_sq = pair_sq + delta;
            let remaining = (n - fixed - 1) as i128;
            let bound = new_pair_sq + remaining * (value as i128) * (value as i128);
            if bound > self.prune_order as i128 * n as i128 {
                break;
            }
            let k_j = (value - last) as usize;
            let next_product = if k_j == 0 {
                product.clone()
            } else {
                product.mul(&self.inv_poch[k_j])
            };
            self.stack.push(value);
            self.descend(depth + 1, value, sum + value as i128, new_pair_sq, &next_product);
            self.stack.pop();
            value += 1;
        }
    }
}

/// `B_N(q)` by direct enumeration of the multisum: the sum over admissible
/// indices of `q^{Q(K)} / ((q)_{k_2} ... (q)_{k_N})`, modulo `q^{order+1}`.
pub fn bn_multisum(n: i64, order: i64) -> TruncSeries {
    bn_multisum_with_work(n, order).0
}

/// [`bn_multisum`] plus the number of enumerated leaves (the work counter
/// reported by the benchmark).
pub fn bn_multisum_with_work(n: i64, order: i64) -> (TruncSeries, u64) {
    let (series, work, _) = multisum_impl(n, order, 0, false);
    (series, work)
}

/// [`bn_multisum`] with the DFS pruning threshold pushed out by
/// `prune_slack`; the result below the truncation must not change.
pub fn bn_multisum_pruned(n: i64, order: i64, prune_slack: i64) -> TruncSeries {
    multisum_impl(n, order, prune_slack, false).0
}

/// All admissible multisum indices contributing up to `q^order` (small cases;
/// exercises the exponent bookkeeping).
pub fn multisum_indices(n: i64, order: i64) -> Vec<MultisumIndex> {
    multisum_impl(n, order, 0, true).2.unwrap()
}

fn multisum_impl(
    n: i64,
    order: i64,
    prune_slack: i64,
    collect: bool,
) -> (TruncSeries, u64, Option<Vec<MultisumIndex>>) {
    assert!(n >= 2, "multisum needs N >= 2");
    assert!(order >= 0);
    let prune_order = order + prune_slack;
    // each K_j pairs with K_1 = 0, so K_j^2 <= N·Q <= N·prune_order
    let kmax = ((n as f64 * prune_order as f64).sqrt() as usize) + 1;
    let inv_poch = inverse_pochhammer_table(kmax, order);
    let mut dfs = MultisumDfs {
        n,
        order,
        prune_order,
        inv_poch: &inv_poch,
        acc: TruncSeries::zero(order),
        work: 0,
        collect: if collect { Some(Vec::new()) } else { None },
        stack: Vec::new(),
    };
    let one = TruncSeries::one(order);
    dfs.descend(2, 0, 0, 0, &one);
    let series = dfs.acc.truncate_to(order);
    assert!(
        series.all_nonnegative_integer(),
        "multisum coefficients must be nonnegative integers"
    );
    (series, dfs.work, dfs.collect)
}

// ----------------------------------------------------------------------
// the theta-quotient route
// ----------------------------------------------------------------------

/// Assemble the `N^2` theta-quotient terms of the `B_N` formula: for
/// `r, s in [0, N)` the term
/// `(-1)^{r+s+1} q^{C(r,2)+C(s+1,2)+r(s+1)(N+1)+r+s+1} · J_{N^2(N+2)}^3 ·
/// j(-q^{N(s-r)}; q^{N^2}) · j(q^{N(N+2)(r+s)+N(N+3)}; q^{N^2(N+2)})` over
/// `j((-1)^N q^{N(N+2)r+N(N+3)/2}; q^{N^2(N+2)}) ·
/// j((-1)^N q^{N(N+2)s+N(N+3)/2}; q^{N^2(N+2)})`.
pub(crate) fn bn_theta_terms(n: i64) -> Result<Vec<QuotientTerm>> {
    if n < 2 {
        return Err(Error::RangeError(format!("theta route needs N >= 2, got {n}")));
    }
    let n128 = n as i128;
    let big_base128 = n128 * n128 * (n128 + 2);
    let big_base: i64 = big_base128.try_into().expect("theta base exponent overflow");
    let den_sign = Sign::Minus.pow(n);
    let half_shift128 = n128 * (n128 + 3) / 2;
    let mut terms = Vec::with_capacity((n * n) as usize);
    for r in 0..n {
        for s in 0..n {
            let (r128, s128) = (r as i128, s as i128);
            let e0: i64 = (binom2(r128)
                + binom2(s128 + 1)
                + r128 * (s128 + 1) * (n128 + 1)
                + r128
                + s128
                + 1)
                .try_into()
                .expect("theta term exponent overflow");
            let mut term = QuotientTerm::new(Sign::Minus.pow(r + s + 1), e0);
            term.num_euler_pow(big_base, 3);
            term.num_j(JSymbol::new(Sign::Minus, n * (s - r), n * n));
            term.num_j(JSymbol::new(
                Sign::Plus,
                (n128 * (n128 + 2) * (r128 + s128) + n128 * (n128 + 3))
                    .try_into()
                    .expect("numerator exponent overflow"),
                big_base,
            ));
            for idx in [r128, s128] {
                let sym = JSymbol::new(
                    den_sign,
                    (n128 * (n128 + 2) * idx + half_shift128)
                        .try_into()
                        .expect("denominator exponent overflow"),
                    big_base,
                );
                term.den_j(sym).map_err(|sym| Error::ZeroDenominator {
                    symbol: sym.to_string(),
                    r,
                    s,
                })?;
            }
            terms.push(term);
        }
    }
    Ok(terms)
}

/// `B_N(q)` via the theta-quotient formula: the `N^2`-term double sum divided
/// by `(q)_inf^2 · Jbar_{0,N(N+2)}`, truncated modulo `q^{order+1}`.
///
/// Internally signed rational arithmetic; the final coefficients are asserted
/// to be nonnegative integers.
pub fn bn_theta(n: i64, order: i64) -> Result<TruncSeries> {
    let terms = bn_theta_terms(n)?;
    let mut sum = TruncSeries::zero(order);
    for term in &terms {
        sum = sum.add(&term.eval_series(order)?);
    }
    let euler = euler_product(order);
    let jbar = crate::theta::expand_j(&JSymbol::jbar(0, n * (n + 2)), order);
    let prefactor = euler.mul(&euler).mul(&jbar);
    let result = sum.mul(&prefactor.invert()?).truncate_to(order).reduce_scale();
    assert_eq!(result.scale(), 1, "theta route must produce integer exponents");
    assert!(
        result.all_nonnegative_integer(),
        "theta route must reproduce nonnegative integer coefficients"
    );
    Ok(result)
}

/// Number of theta-quotient terms in [`bn_theta`] — always `N^2`.
pub fn bn_theta_term_count(n: i64) -> Result<usize> {
    Ok(bn_theta_terms(n)?.len())
}

// ----------------------------------------------------------------------
// the Hecke-series route
// ----------------------------------------------------------------------

/// `B_N(q)` via the Hecke-type series:
/// `q^{-m^2/4N} / (q)_inf^2 · f_{1,N+1,1}(q^{1+m/2}, q^{1-m/2}, q)` for any
/// `m` divisible by `2N` (the result is independent of `m`).
pub fn bn_hecke(n: i64, m: i64, order: i64) -> Result<TruncSeries> {
    if n < 2 {
        return Err(Error::RangeError(format!("Hecke route needs N >= 2, got {n}")));
    }
    if m.rem_euclid(2 * n) != 0 {
        return Err(Error::DivisibilityError { m, two_n: 2 * n });
    }
    // m = 2Nj makes m^2/4N = N j^2 an integer
    let shift = (m as i128 * m as i128 / (4 * n as i128)) as i64;
    let params = HeckeParams::new(
        1,
        n + 1,
        1,
        Monomial::q_power(1 + m / 2),
        Monomial::q_power(1 - m / 2),
    );
    let f = hecke_f(&params, order + shift)?;
    let euler = euler_product(order + shift);
    let inv = euler.mul(&euler).invert()?;
    let result = f
        .mul(&inv)
        .mul_monomial(&Monomial::q_power(-shift))
        .truncate_to(order)
        .reduce_scale();
    assert_eq!(result.scale(), 1, "Hecke route must collapse to integer exponents");
    Ok(result)
}

// ----------------------------------------------------------------------
// string functions
// ----------------------------------------------------------------------

/// Parameters of the level-`N` string function: indices `m`, `ell` with
/// `0 <= ell <= N` (`e_0 = e_N = 0`).
#[derive(Clone, Copy, Debug)]
pub struct StringParams {
    pub level: i64,
    pub m: i64,
    pub ell: i64,
}

/// Inverse Cartan matrix of `A_{N-1}`: `(C^{-1})_{ij} = min(i,j) - ij/N`
/// for `1 <= i, j <= N-1` (returned 0-indexed). Symmetric, positive
/// definite, all entries positive.
pub fn cartan_inverse(n: i64) -> Vec<Vec<Exponent>> {
    assert!(n >= 2);
    (1..n)
        .map(|i| {
            (1..n)
                .map(|j| Exponent::from_integer(i.min(j)) - Exponent::new(i * j, n))
                .collect()
        })
        .collect()
}

/// The level-`N` string function
/// `q^{(m^2-l^2)/4N}/(q)_inf · sum over admissible n of
/// q^{n C^{-1} (n - e_l)^T} / ((q)_{n_1} ... (q)_{n_{N-1}})`,
/// where a vector is admissible when `(m+l)/2N + (C^{-1} n)_1` is an integer
/// (equivalently `m + l ≡ 2·sum_j j·n_j (mod 2N)`). Exponents live on the
/// `1/4N` grid.
pub fn string_function(sp: &StringParams, order: i64) -> Result<TruncSeries> {
    let n = sp.level;
    if n < 2 {
        return Err(Error::RangeError(format!("string function needs level >= 2, got {n}")));
    }
    if sp.ell < 0 || sp.ell > n {
        return Err(Error::RangeError(format!(
            "string function index ell must lie in 0..=N, got {}",
            sp.ell
        )));
    }
    let cinv = cartan_inverse(n);
    let dim = (n - 1) as usize;
    let ell = sp.ell as usize; // 1-indexed into C^{-1} rows when 1 <= ell <= N-1
    let linear: Vec<Exponent> = (0..dim)
        .map(|j| {
            if ell >= 1 && ell <= dim {
                cinv[j][ell - 1]
            } else {
                Exponent::zero()
            }
        })
        .collect();

    let prefactor_exp = Exponent::new(sp.m * sp.m - sp.ell * sp.ell, 4 * n);
    let inner_order = order - prefactor_exp.floor().to_integer();
    if inner_order < 0 {
        return Ok(TruncSeries::zero(order));
    }

    // per-coordinate box bound from (C^{-1})_{jj} v^2 - L_j v <= inner_order
    // plus the slack the other coordinates can contribute
    let slack: f64 = linear
        .iter()
        .enumerate()
        .map(|(j, l)| {
            let ljj = ratio_f64(cinv[j][j]);
            let lf = ratio_f64(*l);
            lf * lf / (4.0 * ljj)
        })
        .sum();
    let target = inner_order as f64 + slack;
    let bounds: Vec<i64> = (0..dim)
        .map(|j| {
            let d = ratio_f64(cinv[j][j]);
            let l = ratio_f64(linear[j]);
            (((l + (l * l + 4.0 * d * target).sqrt()) / (2.0 * d)).ceil() as i64) + 2
        })
        .collect();

    let kmax = bounds.iter().copied().max().unwrap_or(0).max(0) as usize;
    let inv_poch = inverse_pochhammer_table(kmax, inner_order);

    // slack_tail[j] = sum over coordinates >= j of L_i^2 / (4 C^{-1}_{ii}):
    // how far the not-yet-fixed coordinates can pull the form down
    let mut slack_tail = vec![Exponent::zero(); dim + 1];
    for j in (0..dim).rev() {
        let l = linear[j];
        slack_tail[j] = slack_tail[j + 1] + l * l / (Exponent::from_integer(4) * cinv[j][j]);
    }

    // DFS over n in Z_{>=0}^{N-1} with exact quadratic-form pruning: entries
    // of C^{-1} are positive, so the partial form minus remaining slack is a
    // lower bound for the final exponent.
    let mut dfs = StringDfs {
        cinv: &cinv,
        linear: &linear,
        bounds: &bounds,
        slack_tail,
        inv_poch: &inv_poch,
        inner_order,
        two_n: 2 * n,
        residue_target: (sp.m + sp.ell).rem_euclid(2 * n),
        acc: TruncSeries::zero(inner_order),
        vec: Vec::new(),
    };
    let one = TruncSeries::one(inner_order);
    dfs.go(0, 0, Exponent::zero(), &one);

    let euler_inv = euler_product(inner_order).invert()?;
    Ok(dfs
        .acc
        .mul(&euler_inv)
        .mul_monomial(&Monomial::new(Sign::Plus, prefactor_exp))
        .truncate_to(order))
}

struct StringDfs<'a> {
    cinv: &'a [Vec<Exponent>],
    linear: &'a [Exponent],
    bounds: &'a [i64],
    slack_tail: Vec<Exponent>,
    inv_poch: &'a [TruncSeries],
    inner_order: i64,
    two_n: i64,
    /// `(m + ell) mod 2N`; a vector is admissible when `2·sum_j j·n_j` hits it.
    residue_target: i64,
    acc: TruncSeries,
    vec: Vec<i64>,
}

impl StringDfs<'_> {
    fn go(&mut self, j: usize, weighted: i64, q_partial: Exponent, product: &TruncSeries) {
        let dim = self.cinv.len();
        if j == dim {
            if (2 * weighted).rem_euclid(self.two_n) != self.residue_target {
                return;
            }
            let term = product.mul_monomial(&Monomial::new(Sign::Plus, q_partial));
            self.acc = self.acc.add(&term.truncate_to(self.inner_order));
            return;
        }
        for v in 0..=self.bounds[j] {
            // Delta Q = C^{-1}_{jj} v^2 + 2 v sum_{i<j} C^{-1}_{ij} n_i - L_j v
            let mut cross = Exponent::zero();
            for (i, &ni) in self.vec.iter().enumerate() {
                cross += self.cinv[i][j] * Exponent::from_integer(ni);
            }
            let vq = Exponent::from_integer(v);
            let delta = self.cinv[j][j] * vq * vq
                + Exponent::from_integer(2) * vq * cross
                - self.linear[j] * vq;
            let q_new = q_partial + delta;
            if q_new - self.slack_tail[j + 1] > Exponent::from_integer(self.inner_order) {
                // delta(v+1) - delta(v) = C^{-1}_{jj}(2v+1) + 2·cross - L_j:
                // once nonnegative the form only grows with v
                let growth = self.cinv[j][j] * Exponent::from_integer(2 * v + 1)
                    + Exponent::from_integer(2) * cross
                    - self.linear[j];
                if growth >= Exponent::zero() {
                    break;
                }
                continue;
            }
            let next_product = if v == 0 {
                product.clone()
            } else {
                product.mul(&self.inv_poch[v as usize])
            };
            self.vec.push(v);
            self.go(j + 1, weighted + (j as i64 + 1) * v, q_new, &next_product);
            self.vec.pop();
        }
    }
}

fn ratio_f64(r: Exponent) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

// ----------------------------------------------------------------------
// infinite products with restricted exponents
// ----------------------------------------------------------------------

/// `prod 1/(1 - q^s)` over `s >= 1` with `s mod modulus` in `residues`.
pub fn restricted_inverse_product(modulus: i64, residues: &[i64], order: i64) -> TruncSeries {
    assert!(modulus >= 1);
    let mut acc = TruncSeries::one(order);
    for s in 1..=order.max(0) {
        if residues.contains(&(s % modulus)) {
            let mut geo: BTreeMap<i64, Coeff> = BTreeMap::new();
            let mut e = 0;
            while e <= order {
                geo.insert(e, Coeff::one());
                e += s;
            }
            acc = acc.mul(&TruncSeries::from_map(1, &geo, order));
        }
    }
    acc
}

/// Residues `±2, ±3, ±4, ±5 (mod 16)` expanded to `{2,3,4,5,11,12,13,14}`.
pub const SLATER_RESIDUES: [i64; 8] = [2, 3, 4, 5, 11, 12, 13, 14];

/// The mod-16 product `prod 1/(1-q^s)`, `s ≡ ±2, ±3, ±4, ±5 (mod 16)` —
/// the closed product form of `B_2(q)`.
pub fn slater_product(order: i64) -> TruncSeries {
    restricted_inverse_product(16, &SLATER_RESIDUES, order)
}

// ----------------------------------------------------------------------
// Andrews-Gordon
// ----------------------------------------------------------------------

/// Both sides of the Andrews-Gordon identity for `1 <= i <= k`, `k >= 2`:
/// the multisum `sum q^{N_1^2+...+N_{k-1}^2 + N_i+...+N_{k-1}} / ((q)_{n_1}
/// ... (q)_{n_{k-1}})` with `N_j = n_j + ... + n_{k-1}`, and the product
/// `prod 1/(1-q^s)` over `s` not congruent to `0, ±i (mod 2k+1)`.
pub fn andrews_gordon(k: i64, i: i64, order: i64) -> Result<(TruncSeries, TruncSeries)> {
    if k < 2 || i < 1 || i > k {
        return Err(Error::RangeError(format!(
            "Andrews-Gordon needs k >= 2 and 1 <= i <= k, got k={k}, i={i}"
        )));
    }
    let kmax = ((order as f64).sqrt() as usize) + 1;
    let inv_poch = inverse_pochhammer_table(kmax, order);

    // enumerate N_{k-1} <= ... <= N_1 (choosing from the tail upward);
    // n_j = N_j - N_{j+1}, all exponent contributions nonnegative
    struct Dfs<'a> {
        k: i64,
        i: i64,
        order: i64,
        inv_poch: &'a [TruncSeries],
        acc: TruncSeries,
    }
    impl Dfs<'_> {
        fn go(&mut self, j: i64, above: i64, exp: i64, product: &TruncSeries) {
            if j == 0 {
                let term = product.mul_monomial(&Monomial::q_power(exp));
                self.acc = self.acc.add(&term.truncate_to(self.order));
                return;
            }
            let mut nj = above;
            loop {
                let extra = nj * nj + if j >= self.i { nj } else { 0 };
                if exp + extra > self.order {
                    break;
                }
                let next = product.mul(&self.inv_poch[(nj - above) as usize]);
                self.go(j - 1, nj, exp + extra, &next);
                nj += 1;
            }
        }
    }
    let mut dfs = Dfs {
        k,
        i,
        order,
        inv_poch: &inv_poch,
        acc: TruncSeries::zero(order),
    };
    let one = TruncSeries::one(order);
    dfs.go(k - 1, 0, 0, &one);
    let _ = dfs.k;
    let lhs = dfs.acc;

    let modulus = 2 * k + 1;
    let residues: Vec<i64> = (1..modulus)
        .filter(|&r| r != i && r != modulus - i)
        .collect();
    let rhs = restricted_inverse_product(modulus, &residues, order);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::expand_j;

    fn int(v: i64) -> Coeff {
        Coeff::from_integer(v.into())
    }

    /// Partition-counting oracle: partitions of `n` into parts ≡ one of
    /// `residues` mod `modulus`.
    fn restricted_partition_counts(modulus: i64, residues: &[i64], n: usize) -> Vec<i64> {
        let mut dp = vec![0i64; n + 1];
        dp[0] = 1;
        for p in 1..=n {
            if residues.contains(&((p as i64) % modulus)) {
                for k in p..=n {
                    dp[k] += dp[k - p];
                }
            }
        }
        dp
    }

    #[test]
    fn multisum_b2_frozen_values() {
        let b2 = bn_multisum(2, 8);
        assert_eq!(b2.coeff_range_q(8), [1, 0, 1, 1, 2, 2, 3, 3, 5].map(int));
        // independent oracle: partitions into parts ≡ ±2,±3,±4,±5 mod 16
        let dp = restricted_partition_counts(16, &SLATER_RESIDUES, 8);
        for (k, &e) in dp.iter().enumerate() {
            assert_eq!(b2.coeff_q(k as i64).unwrap(), int(e));
        }
    }

    #[test]
    fn multisum_constant_term_one() {
        for n in 2..=7 {
            let b = bn_multisum(n, 4);
            assert_eq!(b.coeff_q(0).unwrap(), Coeff::one(), "N = {n}");
        }
    }

    #[test]
    fn multisum_index_bookkeeping() {
        for n in [2, 3, 4] {
            let indices = multisum_indices(n, 20);
            assert!(!indices.is_empty());
            for idx in &indices {
                assert!(idx.is_admissible(n));
                assert_eq!(idx.exponent(n), idx.exponent_from_diffs(n));
                assert!(idx.diffs().iter().all(|&d| d >= 0));
            }
        }
        // N = 2: admissible K_2 are even, exponent K^2/2
        let idx = MultisumIndex::new(vec![4]);
        assert!(idx.is_admissible(2));
        assert_eq!(idx.exponent(2), 8);
    }

    #[test]
    fn multisum_prune_bound_sound() {
        let base = bn_multisum(3, 30);
        let doubled = bn_multisum_pruned(3, 30, 30);
        assert!(base.agrees_to(&doubled, 30));
    }

    #[test]
    fn slater_matches_partition_oracle() {
        let s = slater_product(20);
        let dp = restricted_partition_counts(16, &SLATER_RESIDUES, 20);
        for (k, &e) in dp.iter().enumerate() {
            assert_eq!(s.coeff_q(k as i64).unwrap(), int(e));
        }
        assert_eq!(s.coeff_q(0).unwrap(), Coeff::one());
    }

    #[test]
    fn theta_route_small_cases() {
        for n in [2, 3] {
            let theta = bn_theta(n, 30).unwrap();
            let multi = bn_multisum(n, 30);
            assert!(
                theta.agrees_to(&multi, 30),
                "theta vs multisum at N = {n}: {:?}",
                theta.first_difference(&multi)
            );
        }
    }

    #[test]
    fn theta_term_count_is_n_squared() {
        for n in 2..=6 {
            assert_eq!(bn_theta_term_count(n).unwrap(), (n * n) as usize);
        }
    }

    #[test]
    fn theta_matches_slater_at_n2() {
        let theta = bn_theta(2, 60).unwrap();
        let slater = slater_product(60);
        assert!(theta.agrees_to(&slater, 60));
    }

    #[test]
    fn hecke_route_matches_multisum() {
        for n in [2, 3] {
            let h = bn_hecke(n, 0, 30).unwrap();
            let m = bn_multisum(n, 30);
            assert!(h.agrees_to(&m, 30), "Hecke route at N = {n}");
        }
    }

    #[test]
    fn hecke_route_m_independence() {
        let a = bn_hecke(2, 4, 25).unwrap();
        let b = bn_hecke(2, 0, 25).unwrap();
        assert!(a.agrees_to(&b, 25));
        assert!(matches!(
            bn_hecke(2, 3, 10),
            Err(Error::DivisibilityError { m: 3, two_n: 4 })
        ));
    }

    #[test]
    fn cartan_inverse_values() {
        let c = cartan_inverse(4);
        // (C^{-1})_{ij} = min(i,j) - ij/4
        assert_eq!(c[0][0], Exponent::new(3, 4));
        assert_eq!(c[0][2], Exponent::new(1, 4));
        assert_eq!(c[1][1], Exponent::one());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(c[i][j], c[j][i]);
                assert!(c[i][j] > Exponent::zero());
            }
        }
    }

    #[test]
    fn string_function_bridge_to_multisum() {
        // q^{-m^2/4N} (q)_inf · C^N_{m,0} = B_N for m divisible by 2N
        for (n, m) in [(2, 0), (2, 4), (3, 0), (3, 6)] {
            let shift = Exponent::new(-m * m, 4 * n);
            let extra = (-shift.floor().to_integer()).max(0);
            let c = string_function(&StringParams { level: n, m, ell: 0 }, 20 + extra).unwrap();
            let lhs = c
                .mul(&euler_product(20 + extra))
                .mul_monomial(&Monomial::new(Sign::Plus, shift))
                .truncate_to(20)
                .reduce_scale();
            let rhs = bn_multisum(n, 20);
            assert!(
                lhs.agrees_to(&rhs, 20),
                "string bridge fails at N={n}, m={m}: {:?}",
                lhs.first_difference(&rhs)
            );
        }
    }

    #[test]
    fn string_function_parity_vanishing() {
        // m + ell odd: the congruence has no solutions
        let c = string_function(&StringParams { level: 2, m: 1, ell: 0 }, 15).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn string_function_hm_example_relation() {
        // (q)_inf^3 · C^N_{m,0} = f_{1,N+1,1}(q^{1+m/2}, q^{1-m/2}, q)
        for (n, m) in [(2, 0), (3, 0), (2, 4)] {
            let c = string_function(&StringParams { level: n, m, ell: 0 }, 25).unwrap();
            let e = euler_product(25);
            let lhs = c.mul(&e.mul(&e).mul(&e)).truncate_to(20).reduce_scale();
            let f = hecke_f(
                &HeckeParams::new(
                    1,
                    n + 1,
                    1,
                    Monomial::q_power(1 + m / 2),
                    Monomial::q_power(1 - m / 2),
                ),
                20,
            )
            .unwrap();
            assert!(
                lhs.agrees_to(&f, 20),
                "string/Hecke example relation fails at N={n}, m={m}"
            );
        }
    }

    #[test]
    fn andrews_gordon_rogers_ramanujan() {
        // k = 2: the two Rogers-Ramanujan identities
        for i in [1, 2] {
            let (lhs, rhs) = andrews_gordon(2, i, 60).unwrap();
            assert!(lhs.agrees_to(&rhs, 60), "RR identity i={i}");
            assert_eq!(lhs.coeff_q(0).unwrap(), Coeff::one());
        }
        // first RR: sum q^{n^2}/(q)_n has parts ≡ 1, 4 mod 5
        let (lhs, _) = andrews_gordon(2, 2, 20).unwrap();
        let dp = restricted_partition_counts(5, &[1, 4], 20);
        for (k, &e) in dp.iter().enumerate() {
            assert_eq!(lhs.coeff_q(k as i64).unwrap(), int(e));
        }
        assert!(matches!(andrews_gordon(2, 3, 5), Err(Error::RangeError(_))));
    }

    #[test]
    fn theta_block_reduces_to_bn_display() {
        // theta_{1,N}(q,q,q) equals the inner double sum (B_N times the
        // extracted prefactor (q)^2 Jbar_{0,N(N+2)})
        for n in [2, 3] {
            let q1 = Monomial::q_power(1);
            let tb = crate::hecke::theta_block(1, n, &q1, &q1, 25).unwrap();
            let e = euler_product(25);
            let jbar = expand_j(&JSymbol::jbar(0, n * (n + 2)), 25);
            let rhs = bn_theta(n, 25).unwrap().mul(&e).mul(&e).mul(&jbar);
            assert!(
                tb.agrees_to(&rhs.truncate_to(25), 25),
                "theta block vs display at N = {n}"
            );
        }
    }
}
