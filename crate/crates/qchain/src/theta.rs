//! Theta symbols `j(±q^a; q^m)`, quasi-periodic normalization, product
//! expansion, and an independent triple-product-sum oracle.
//!
//! The expansion route is the product `(x)_inf (q^m/x)_inf (q^m; q^m)_inf`;
//! the oracle is the bilateral sum `sum_n (-1)^n q^{m·n(n-1)/2} x^n`. The two
//! are kept strictly separate so they can cross-validate each other.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::Zero;

use crate::error::{Error, Result};
use crate::series::{
    euler_product_base, pochhammer_infinite_base, Coeff, Exponent, Monomial, Sign, TruncSeries,
};

/// Symbolic descriptor of `j(sign·q^a; q^m)`.
///
/// `a` may be any integer (negative or `>= m`) before normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JSymbol {
    pub sign: Sign,
    pub a: i64,
    pub m: i64,
}

impl JSymbol {
    pub fn new(sign: Sign, a: i64, m: i64) -> Self {
        assert!(m >= 1, "theta modulus exponent must be positive");
        JSymbol { sign, a, m }
    }

    /// `J_{a,m} = j(q^a; q^m)`.
    pub fn big_j(a: i64, m: i64) -> Self {
        JSymbol::new(Sign::Plus, a, m)
    }

    /// `Jbar_{a,m} = j(-q^a; q^m)`.
    pub fn jbar(a: i64, m: i64) -> Self {
        JSymbol::new(Sign::Minus, a, m)
    }

    /// `J_m = J_{m,3m} = (q^m; q^m)_inf`.
    pub fn euler(m: i64) -> Self {
        JSymbol::new(Sign::Plus, m, 3 * m)
    }
}

impl fmt::Display for JSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j({}q^{}; q^{})", self.sign, self.a, self.m)
    }
}

impl FromStr for JSymbol {
    type Err = Error;

    /// Accepts `j(s q^a; q^m)` with `s` in `{+, -}` (sign optional for `+`),
    /// and the shorthands `Jbar(a,m)`, `J(a,m)`, `J(m)`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::ParseError(format!("cannot parse theta symbol {s:?}"));
        let int = |v: &str| v.parse::<i64>().map_err(|_| bad());
        if let Some(rest) = t.strip_prefix("Jbar(").and_then(|r| r.strip_suffix(')')) {
            let (a, m) = rest.split_once(',').ok_or_else(bad)?;
            return Ok(JSymbol::jbar(int(a)?, int(m)?));
        }
        if let Some(rest) = t.strip_prefix("J(").and_then(|r| r.strip_suffix(')')) {
            return match rest.split_once(',') {
                Some((a, m)) => Ok(JSymbol::big_j(int(a)?, int(m)?)),
                None => Ok(JSymbol::euler(int(rest)?)),
            };
        }
        let rest = t
            .strip_prefix("j(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (arg, base) = rest.split_once(';').ok_or_else(bad)?;
        let m = match base {
            "q" => 1,
            _ => int(base.strip_prefix("q^").ok_or_else(bad)?)?,
        };
        let (sign, arg) = match arg.strip_prefix('-') {
            Some(r) => (Sign::Minus, r),
            None => (Sign::Plus, arg.strip_prefix('+').unwrap_or(arg)),
        };
        let a = match arg {
            "1" => 0,
            "q" => 1,
            _ => int(arg.strip_prefix("q^").ok_or_else(bad)?)?,
        };
        if m < 1 {
            return Err(bad());
        }
        Ok(JSymbol::new(sign, a, m))
    }
}

/// Result of quasi-periodic normalization: `expand(original) =
/// prefactor · expand(canonical)` with `0 <= canonical.a < m`, unless the
/// symbol vanishes identically (`is_zero`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizedJ {
    pub prefactor: Monomial,
    pub canonical: JSymbol,
    pub is_zero: bool,
}

/// Normalize via `j(q^{mk} x; q^m) = (-1)^k q^{-m·k(k-1)/2} x^{-k} j(x; q^m)`.
///
/// The zero case is exactly `sign = +` with `a ≡ 0 (mod m)`, since `j(1; q^m)`
/// contains the factor `1 - 1`.
pub fn normalize_j(sym: &JSymbol) -> NormalizedJ {
    let m = sym.m;
    let k = sym.a.div_euclid(m);
    let a0 = sym.a.rem_euclid(m);
    let canonical = JSymbol::new(sym.sign, a0, m);
    let is_zero = sym.sign == Sign::Plus && a0 == 0;
    if is_zero {
        return NormalizedJ {
            prefactor: Monomial::one(),
            canonical,
            is_zero,
        };
    }
    // x = sign·q^{a0}: prefactor = (-1)^k sign^k q^{-m·k(k-1)/2 - k·a0}
    let e128 = -(m as i128) * (k as i128) * (k as i128 - 1) / 2 - (k as i128) * (a0 as i128);
    let e: i64 = e128.try_into().expect("normalization exponent overflows i64");
    NormalizedJ {
        prefactor: Monomial::new(Sign::Minus.pow(k).mul(sym.sign.pow(k)), Exponent::from_integer(e)),
        canonical,
        is_zero,
    }
}

/// Minimal exponent of `expand_j(sym)`, or `None` when the symbol vanishes.
pub(crate) fn j_min_exp(sym: &JSymbol) -> Option<i64> {
    let n = normalize_j(sym);
    if n.is_zero {
        None
    } else {
        Some(*n.prefactor.exp.numer())
    }
}

/// Expansion of a canonical symbol (`0 <= a < m`, not the zero case) as
/// `(x)_inf (q^m/x)_inf (q^m; q^m)_inf` in base `q^m`. Starts at `q^0`.
fn expand_canonical_j(sym: &JSymbol, order: i64) -> TruncSeries {
    debug_assert!(0 <= sym.a && sym.a < sym.m);
    debug_assert!(!(sym.sign == Sign::Plus && sym.a == 0));
    if order < 0 {
        return TruncSeries::zero(order);
    }
    let step = Exponent::from_integer(sym.m);
    let x = Monomial::new(sym.sign, Exponent::from_integer(sym.a));
    let q_over_x = Monomial::new(sym.sign, Exponent::from_integer(sym.m - sym.a));
    let p1 = pochhammer_infinite_base(&x, step, order).expect("canonical argument in range");
    let p2 = pochhammer_infinite_base(&q_over_x, step, order).expect("shifted argument in range");
    let p3 = euler_product_base(sym.m, order);
    p1.mul(&p2).mul(&p3)
}

/// Expand `j(sign·q^a; q^m)` modulo `q^{order+1}` via the product definition,
/// normalizing the argument first. Vanishing symbols give the zero series.
pub fn expand_j(sym: &JSymbol, order: i64) -> TruncSeries {
    let n = normalize_j(sym);
    if n.is_zero {
        return TruncSeries::zero(order);
    }
    let shift = *n.prefactor.exp.numer();
    let canon = expand_canonical_j(&n.canonical, order - shift);
    canon.mul_monomial(&n.prefactor).truncate_to(order)
}

/// Independent oracle: `j(x; q^m) = sum_{n in Z} (-1)^n q^{m·n(n-1)/2} x^n`.
///
/// Test-only route; production expansion always goes through [`expand_j`].
pub fn triple_product_oracle(sym: &JSymbol, order: i64) -> TruncSeries {
    let m = sym.m as i128;
    let a = sym.a as i128;
    let term_exp = |n: i128| m * n * (n - 1) / 2 + a * n;
    let mut map: BTreeMap<i64, Coeff> = BTreeMap::new();
    let mut put = |n: i128| {
        let e = term_exp(n);
        if e <= order as i128 {
            let c = Sign::Minus.pow(n as i64).mul(sym.sign.pow(n as i64)).coeff();
            let slot = map.entry(e.try_into().expect("oracle exponent overflow")).or_insert_with(Coeff::zero);
            *slot += c;
            true
        } else {
            false
        }
    };
    // upward: exponents nondecreasing once m·n + a >= 0
    let mut n: i128 = 0;
    loop {
        let included = put(n);
        if !included && m * n + a >= 0 {
            break;
        }
        n += 1;
    }
    // downward: nondecreasing (going down) once m·(n-1) + a <= 0
    let mut n: i128 = -1;
    loop {
        let included = put(n);
        if !included && m * (n - 1) + a <= 0 {
            break;
        }
        n -= 1;
    }
    TruncSeries::from_map(1, &map, order)
}

/// Product `j(x_1; q) j(x_2; q) ... j(x_n; q)` of expansions, modulo
/// `q^{order+1}`. The empty list gives `1`.
pub fn j_list(syms: &[JSymbol], order: i64) -> TruncSeries {
    let mut mins = Vec::with_capacity(syms.len());
    for sym in syms {
        match j_min_exp(sym) {
            Some(mu) => mins.push(mu),
            None => return TruncSeries::zero(order),
        }
    }
    let total_min: i64 = mins.iter().sum();
    let mut acc = TruncSeries::one(order - total_min.min(0));
    for (sym, mu) in syms.iter().zip(&mins) {
        let factor_order = order - (total_min - mu);
        acc = acc.mul(&expand_j(sym, factor_order));
    }
    acc.truncate_to(order)
}

// ----------------------------------------------------------------------
// Theta-quotient terms: the shared shape `±q^E · (prod num) / (prod den)`
// with canonical factors, used by the N²-term sums and their numeric
// evaluation. Normalization prefactors are folded into (sign, E) up front so
// every stored factor starts at q^0 with nonzero constant term.
// ----------------------------------------------------------------------

/// A factor whose expansion starts at `q^0` with nonzero constant.
#[derive(Clone, Debug)]
pub(crate) enum CanonFactor {
    /// Canonical nonvanishing `j(±q^a; q^m)`, `0 <= a < m`.
    J(JSymbol),
    /// `(q^m; q^m)_inf^pow`.
    EulerPow { base: i64, pow: u32 },
}

impl CanonFactor {
    pub(crate) fn expand(&self, order: i64) -> TruncSeries {
        match *self {
            CanonFactor::J(ref sym) => expand_canonical_j(sym, order),
            CanonFactor::EulerPow { base, pow } => {
                let e = euler_product_base(base, order);
                let mut acc = TruncSeries::one(order);
                for _ in 0..pow {
                    acc = acc.mul(&e);
                }
                acc
            }
        }
    }
}

/// One term of a theta-quotient sum.
#[derive(Clone, Debug)]
pub(crate) struct QuotientTerm {
    pub sign: Sign,
    pub net_exp: i64,
    pub num: Vec<CanonFactor>,
    pub den: Vec<CanonFactor>,
    pub vanished: bool,
}

impl QuotientTerm {
    pub(crate) fn new(sign: Sign, exp: i64) -> Self {
        QuotientTerm {
            sign,
            net_exp: exp,
            num: Vec::new(),
            den: Vec::new(),
            vanished: false,
        }
    }

    /// Push a numerator symbol; a vanishing symbol zeroes the whole term.
    pub(crate) fn num_j(&mut self, sym: JSymbol) {
        let n = normalize_j(&sym);
        if n.is_zero {
            self.vanished = true;
            return;
        }
        self.sign = self.sign.mul(n.prefactor.sign);
        self.net_exp += *n.prefactor.exp.numer();
        self.num.push(CanonFactor::J(n.canonical));
    }

    /// Push a denominator symbol; a vanishing symbol is an error (reported
    /// with the offending symbol).
    pub(crate) fn den_j(&mut self, sym: JSymbol) -> std::result::Result<(), JSymbol> {
        let n = normalize_j(&sym);
        if n.is_zero {
            return Err(sym);
        }
        self.sign = self.sign.mul(n.prefactor.sign);
        self.net_exp -= *n.prefactor.exp.numer();
        self.den.push(CanonFactor::J(n.canonical));
    Ok(())
    }

    pub(crate) fn num_euler_pow(&mut self, base: i64, pow: u32) {
        self.num.push(CanonFactor::EulerPow { base, pow });
    }

    /// Exact series of the term modulo `q^{order+1}`.
    pub(crate) fn eval_series(&self, order: i64) -> Result<TruncSeries> {
        if self.vanished {
            return Ok(TruncSeries::zero(order));
        }
        let w = order - self.net_exp;
        if w < 0 {
            // the term starts beyond the truncation window
            return Ok(TruncSeries::zero(order));
        }
        let mut acc = TruncSeries::one(w);
        for f in &self.num {
            acc = acc.mul(&f.expand(w));
        }
        for f in &self.den {
            acc = acc.mul(&f.expand(w).invert()?);
        }
        let shifted = acc.mul_monomial(&Monomial::new(
            self.sign,
            Exponent::from_integer(self.net_exp),
        ));
        Ok(shifted.truncate_to(order))
    }
}
