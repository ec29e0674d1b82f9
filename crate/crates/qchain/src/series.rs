//! Exact truncated Laurent series in `q` over arbitrary-precision rationals.
//!
//! All symbolic computation in the crate happens in this ring. A series is
//! known modulo `q^{(T+1)/D}` where `D` is a global exponent scale (so
//! exponents live in `(1/D)·Z`, which accommodates rational powers such as
//! `q^{-m^2/4N}`), and coefficients are exact [`BigRational`]s.
//!
//! Truncation-order propagation is pessimistic: the order of a result is the
//! minimum over the operands adjusted per operation, never silently extended.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::Ratio;
use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Coeff = BigRational;

/// Exact rational exponent (kept reduced by [`Ratio`]).
pub type Exponent = Ratio<i64>;

/// Sign of a monomial, `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `self^k` (well-defined for negative `k` since signs are involutions).
    pub fn pow(self, k: i64) -> Sign {
        if self == Sign::Plus || k % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn coeff(self) -> Coeff {
        match self {
            Sign::Plus => Coeff::one(),
            Sign::Minus => -Coeff::one(),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// A signed power of `q`: `±q^e` with exact rational exponent.
///
/// Monomials are the only admissible substitutions for the `x`, `y`, `z`
/// parameters of the theta, Hecke and Appell-Lerch operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub sign: Sign,
    pub exp: Exponent,
}

impl Monomial {
    pub fn new(sign: Sign, exp: Exponent) -> Self {
        Monomial { sign, exp }
    }

    /// `+q^e` for integer `e`.
    pub fn q_power(e: i64) -> Self {
        Monomial::new(Sign::Plus, Exponent::from_integer(e))
    }

    /// `-q^e` for integer `e`.
    pub fn neg_q_power(e: i64) -> Self {
        Monomial::new(Sign::Minus, Exponent::from_integer(e))
    }

    pub fn one() -> Self {
        Monomial::q_power(0)
    }

    /// `-1` as a monomial (the Appell-Lerch `z` used throughout).
    pub fn minus_one() -> Self {
        Monomial::neg_q_power(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.sign.mul(other.sign), self.exp + other.exp)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial::new(self.sign, -self.exp)
    }

    /// `self^k`, valid for any integer `k`.
    pub fn pow(&self, k: i64) -> Monomial {
        Monomial::new(self.sign.pow(k), self.exp * Exponent::from_integer(k))
    }

    pub fn neg(&self) -> Monomial {
        Monomial::new(self.sign.mul(Sign::Minus), self.exp)
    }

    pub fn is_one(&self) -> bool {
        self.sign == Sign::Plus && self.exp.is_zero()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == Sign::Minus { "-" } else { "" };
        if self.exp.is_zero() {
            write!(f, "{}1", s)
        } else if self.exp.is_integer() {
            write!(f, "{}q^{}", s, self.exp.numer())
        } else {
            write!(f, "{}q^({})", s, self.exp)
        }
    }
}

fn fmt_exp(pos: i64, scale: i64) -> String {
    let e = Exponent::new(pos, scale);
    if e.is_integer() {
        format!("{}", e.numer())
    } else {
        format!("({})", e)
    }
}

/// Truncated Laurent series: exact coefficients indexed by exponents in
/// `(1/scale)·Z`, known modulo `q^{(trunc_order+1)/scale}`.
///
/// Invariants: a nonzero series has nonzero first and last stored
/// coefficients; no coefficient is stored beyond the truncation order; the
/// zero series stores nothing and keeps a well-defined truncation order.
#[derive(Clone, Debug)]
pub struct TruncSeries {
    scale: i64,
    min_exp: i64,
    trunc_order: i64,
    coeffs: Vec<Coeff>,
}

/// Truncation index in 1/scale units for a plain order in whole powers of q.
fn units(order_q: i64, scale: i64) -> i64 {
    (order_q + 1) * scale - 1
}

impl TruncSeries {
    // ------------------------------------------------------------------
    // constructors
    // ------------------------------------------------------------------

    /// The zero series, known modulo `q^{order+1}`.
    pub fn zero(order_q: i64) -> Self {
        TruncSeries {
            scale: 1,
            min_exp: 0,
            trunc_order: order_q,
            coeffs: Vec::new(),
        }
    }

    pub fn zero_scaled(scale: i64, trunc_units: i64) -> Self {
        assert!(scale >= 1);
        TruncSeries {
            scale,
            min_exp: 0,
            trunc_order: trunc_units,
            coeffs: Vec::new(),
        }
    }

    /// The constant series `1`, known modulo `q^{order+1}`.
    pub fn one(order_q: i64) -> Self {
        Self::constant(Coeff::one(), order_q)
    }

    pub fn constant(c: Coeff, order_q: i64) -> Self {
        if c.is_zero() || order_q < 0 {
            return Self::zero(order_q);
        }
        TruncSeries {
            scale: 1,
            min_exp: 0,
            trunc_order: order_q,
            coeffs: vec![c],
        }
    }

    /// The series of a single monomial `±q^e`.
    pub fn monomial(m: &Monomial, order_q: i64) -> Self {
        let scale = *m.exp.denom();
        let pos = *m.exp.numer() * (scale.signum());
        let scale = scale.abs();
        let t = units(order_q, scale);
        if pos > t {
            return Self::zero_scaled(scale, t);
        }
        TruncSeries {
            scale,
            min_exp: pos,
            trunc_order: t,
            coeffs: vec![m.sign.coeff()],
        }
    }

    /// Build from raw parts (units of `1/scale`); normalizes leading/trailing
    /// zeros and drops anything beyond the truncation index.
    pub fn from_parts(scale: i64, min_exp: i64, trunc_units: i64, coeffs: Vec<Coeff>) -> Self {
        assert!(scale >= 1, "scale must be positive");
        let mut s = TruncSeries {
            scale,
            min_exp,
            trunc_order: trunc_units,
            coeffs,
        };
        s.normalize();
        s
    }

    /// Build from an exponent-indexed map (units of `1/scale`).
    pub fn from_map(scale: i64, map: &BTreeMap<i64, Coeff>, trunc_units: i64) -> Self {
        let mut nonzero = map.iter().filter(|(_, c)| !c.is_zero());
        let first = match nonzero.next() {
            Some((&k, _)) => k,
            None => return Self::zero_scaled(scale, trunc_units),
        };
        let mut coeffs = Vec::new();
        let mut expect = first;
        for (&k, c) in map.range(first..) {
            if c.is_zero() || k > trunc_units {
                continue;
            }
            while expect < k {
                coeffs.push(Coeff::zero());
                expect += 1;
            }
            coeffs.push(c.clone());
            expect = k + 1;
        }
        Self::from_parts(scale, first, trunc_units, coeffs)
    }

    fn normalize(&mut self) {
        if self.trunc_order < self.min_exp + self.coeffs.len() as i64 - 1 {
            let keep = (self.trunc_order - self.min_exp + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.min_exp += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
    }

    // ------------------------------------------------------------------
    // accessors
    // ------------------------------------------------------------------

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Minimal exponent as an exact rational (None for the zero series).
    pub fn min_exp(&self) -> Option<Exponent> {
        if self.is_zero() {
            None
        } else {
            Some(Exponent::new(self.min_exp, self.scale))
        }
    }

    /// Truncation index in 1/scale units.
    pub fn trunc_units(&self) -> i64 {
        self.trunc_order
    }

    /// Largest whole order `T` such that the series is known modulo `q^{T+1}`.
    pub fn order_q(&self) -> i64 {
        // trunc_order >= (T+1)*scale - 1  <=>  T <= (trunc_order+1)/scale - 1
        (self.trunc_order + 1).div_euclid(self.scale) - 1
    }

    pub fn is_known_to(&self, order_q: i64) -> bool {
        self.trunc_order >= units(order_q, self.scale)
    }

    /// Coefficient of `q^e`; `None` when `e` lies beyond the truncation order
    /// (i.e. the coefficient is unknown, not zero).
    pub fn coeff_at(&self, e: Exponent) -> Option<Coeff> {
        let scaled = e * Exponent::from_integer(self.scale);
        if !scaled.is_integer() {
            let pos_times = *scaled.numer();
            // off the exponent grid: zero if within the known range
            return if pos_times <= self.trunc_order * *scaled.denom() {
                Some(Coeff::zero())
            } else {
                None
            };
        }
        let pos = *scaled.numer();
        if pos > self.trunc_order {
            return None;
        }
        let idx = pos - self.min_exp;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Some(Coeff::zero())
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    /// Coefficient of `q^k` for integer `k`.
    pub fn coeff_q(&self, k: i64) -> Option<Coeff> {
        self.coeff_at(Exponent::from_integer(k))
    }

    /// Coefficients of `q^0..=q^n` as rationals (all must be known).
    pub fn coeff_range_q(&self, n: i64) -> Vec<Coeff> {
        (0..=n)
            .map(|k| self.coeff_q(k).expect("coefficient beyond truncation"))
            .collect()
    }

    /// Iterate `(position, coefficient)` over stored entries (1/scale units).
    pub fn iter_units(&self) -> impl Iterator<Item = (i64, &Coeff)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    pub fn all_integer(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn all_nonnegative_integer(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    // ------------------------------------------------------------------
    // rescaling
    // ------------------------------------------------------------------

    /// Express the same series on the finer grid `1/(scale*k)`.
    pub fn rescale(&self, k: i64) -> TruncSeries {
        assert!(k >= 1);
        if k == 1 {
            return self.clone();
        }
        let trunc = (self.trunc_order + 1) * k - 1;
        if self.is_zero() {
            return Self::zero_scaled(self.scale * k, trunc);
        }
        let mut coeffs = vec![Coeff::zero(); ((self.coeffs.len() as i64 - 1) * k + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        TruncSeries {
            scale: self.scale * k,
            min_exp: self.min_exp * k,
            trunc_order: trunc,
            coeffs,
        }
    }

    /// Shrink the scale as far as the stored exponents allow.
    pub fn reduce_scale(&self) -> TruncSeries {
        if self.scale == 1 {
            return self.clone();
        }
        let mut g = self.scale;
        for (pos, c) in self.iter_units() {
            if !c.is_zero() {
                g = g.gcd(&pos);
                if g == 1 {
                    return self.clone();
                }
            }
        }
        let trunc = (self.trunc_order + 1).div_euclid(g) - 1;
        if self.is_zero() {
            return Self::zero_scaled(self.scale / g, trunc);
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() / g as usize + 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i as i64 % g == 0 {
                coeffs.push(c.clone());
            } else {
                debug_assert!(c.is_zero());
            }
        }
        TruncSeries::from_parts(self.scale / g, self.min_exp / g, trunc, coeffs)
    }

    fn to_common_scale(a: &TruncSeries, b: &TruncSeries) -> (TruncSeries, TruncSeries) {
        if a.scale == b.scale {
            (a.clone(), b.clone())
        } else {
            let l = a.scale.lcm(&b.scale);
            (a.rescale(l / a.scale), b.rescale(l / b.scale))
        }
    }

    // ------------------------------------------------------------------
    // ring operations
    // ------------------------------------------------------------------

    pub fn neg(&self) -> TruncSeries {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -c.clone();
        }
        out
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let (a, b) = Self::to_common_scale(self, other);
        let trunc = a.trunc_order.min(b.trunc_order);
        if a.is_zero() && b.is_zero() {
            return Self::zero_scaled(a.scale, trunc);
        }
        let min = match (a.is_zero(), b.is_zero()) {
            (false, false) => a.min_exp.min(b.min_exp),
            (false, true) => a.min_exp,
            (true, false) => b.min_exp,
            (true, true) => unreachable!(),
        };
        let max = trunc;
        if max < min {
            return Self::zero_scaled(a.scale, trunc);
        }
        let mut coeffs = vec![Coeff::zero(); (max - min + 1) as usize];
        for (pos, c) in a.iter_units() {
            if pos <= max {
                coeffs[(pos - min) as usize] += c;
            }
        }
        for (pos, c) in b.iter_units() {
            if pos <= max {
                coeffs[(pos - min) as usize] += c;
            }
        }
        Self::from_parts(a.scale, min, trunc, coeffs)
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &Coeff) -> TruncSeries {
        if c.is_zero() {
            return Self::zero_scaled(self.scale, self.trunc_order);
        }
        let mut out = self.clone();
        for x in &mut out.coeffs {
            *x = x.clone() * c;
        }
        out
    }

    /// Multiply by `±q^e`: a pure shift (no order loss for an exact monomial).
    pub fn mul_monomial(&self, m: &Monomial) -> TruncSeries {
        let md = *m.exp.denom();
        let s = if md == 1 {
            self.clone()
        } else {
            let l = self.scale.lcm(&md);
            self.rescale(l / self.scale)
        };
        let shift = *(m.exp * Exponent::from_integer(s.scale)).numer();
        let mut out = s;
        out.min_exp += shift;
        out.trunc_order += shift;
        if m.sign == Sign::Minus {
            for c in &mut out.coeffs {
                *c = -c.clone();
            }
        }
        out
    }

    /// Cauchy product, truncated at `min(a.T + b.min, b.T + a.min)` (the zero
    /// series counts with an effective minimum of `T + 1`).
    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let (a, b) = Self::to_common_scale(self, other);
        let a_min_eff = if a.is_zero() { a.trunc_order + 1 } else { a.min_exp };
        let b_min_eff = if b.is_zero() { b.trunc_order + 1 } else { b.min_exp };
        let trunc = (a.trunc_order + b_min_eff).min(b.trunc_order + a_min_eff);
        if a.is_zero() || b.is_zero() {
            return Self::zero_scaled(a.scale, trunc);
        }
        let min = a.min_exp + b.min_exp;
        if min > trunc {
            return Self::zero_scaled(a.scale, trunc);
        }
        let len = (trunc - min + 1) as usize;
        let mut coeffs = vec![Coeff::zero(); len];
        for (pa, ca) in a.iter_units() {
            if ca.is_zero() {
                continue;
            }
            let hi = trunc - pa;
            for (pb, cb) in b.iter_units() {
                if pb > hi {
                    break;
                }
                if cb.is_zero() {
                    continue;
                }
                coeffs[(pa + pb - min) as usize] += ca * cb;
            }
        }
        Self::from_parts(a.scale, min, trunc, coeffs)
    }

    /// Multiply by the sparse unit `1 + c·q^{shift/scale}` (`shift > 0`),
    /// keeping the truncation order (the factor is exactly known).
    fn mul_affine_unit(&self, c: &Coeff, shift_units: i64) -> TruncSeries {
        assert!(shift_units > 0);
        if self.is_zero() {
            return self.clone();
        }
        let min = self.min_exp;
        let top = (self.min_exp + self.coeffs.len() as i64 - 1 + shift_units).min(self.trunc_order);
        let len = (top - min + 1).max(self.coeffs.len() as i64) as usize;
        let mut coeffs = vec![Coeff::zero(); len];
        coeffs[..self.coeffs.len()].clone_from_slice(&self.coeffs);
        for (pos, x) in self.iter_units() {
            let p = pos + shift_units;
            if p > self.trunc_order {
                break;
            }
            if !x.is_zero() {
                coeffs[(p - min) as usize] += x * c;
            }
        }
        Self::from_parts(self.scale, min, self.trunc_order, coeffs)
    }

    /// Two-sided inverse modulo `q^{T_inv+1}` with `T_inv = T - 2·min_exp`.
    pub fn invert(&self) -> Result<TruncSeries> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let mu = self.min_exp;
        let lead = &self.coeffs[0];
        debug_assert!(!lead.is_zero());
        let trunc = self.trunc_order - 2 * mu;
        let len = (self.trunc_order - mu + 1) as usize; // relative window length
        let mut inv: Vec<Coeff> = Vec::with_capacity(len);
        let lead_inv = lead.recip();
        inv.push(lead_inv.clone());
        for k in 1..len {
            let mut acc = Coeff::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &inv[k - j];
                }
            }
            inv.push(-(acc * &lead_inv));
        }
        Ok(Self::from_parts(self.scale, -mu, trunc, inv))
    }

    pub fn div(&self, other: &TruncSeries) -> Result<TruncSeries> {
        Ok(self.mul(&other.invert()?))
    }

    /// Drop knowledge beyond `q^{order+1}` (no-op if already coarser).
    pub fn truncate_to(&self, order_q: i64) -> TruncSeries {
        let t = units(order_q, self.scale);
        if t >= self.trunc_order {
            return self.clone();
        }
        let mut out = self.clone();
        out.trunc_order = t;
        out.normalize();
        out
    }

    // ------------------------------------------------------------------
    // comparison helpers
    // ------------------------------------------------------------------

    /// First exponent (up to the common known order) where the two series
    /// differ, with both coefficients.
    pub fn first_difference(&self, other: &TruncSeries) -> Option<(Exponent, Coeff, Coeff)> {
        let (a, b) = Self::to_common_scale(self, other);
        let t = a.trunc_order.min(b.trunc_order);
        let lo = match (a.is_zero(), b.is_zero()) {
            (true, true) => return None,
            (false, true) => a.min_exp,
            (true, false) => b.min_exp,
            (false, false) => a.min_exp.min(b.min_exp),
        };
        for pos in lo..=t {
            let ca = a
                .coeff_at(Exponent::new(pos, a.scale))
                .unwrap_or_else(Coeff::zero);
            let cb = b
                .coeff_at(Exponent::new(pos, b.scale))
                .unwrap_or_else(Coeff::zero);
            if ca != cb {
                return Some((Exponent::new(pos, a.scale), ca, cb));
            }
        }
        None
    }

    /// Exact agreement modulo `q^{order+1}` (both series must be known that far).
    pub fn agrees_to(&self, other: &TruncSeries, order_q: i64) -> bool {
        assert!(
            self.is_known_to(order_q) && other.is_known_to(order_q),
            "series not known to order {order_q}"
        );
        match self.truncate_to(order_q).first_difference(&other.truncate_to(order_q)) {
            None => true,
            Some(_) => false,
        }
    }
}

impl PartialEq for TruncSeries {
    /// Structural equality of the reduced representations (same knowledge,
    /// same values).
    fn eq(&self, other: &Self) -> bool {
        let a = self.reduce_scale();
        let b = other.reduce_scale();
        a.scale == b.scale
            && a.min_exp == b.min_exp
            && a.trunc_order == b.trunc_order
            && a.coeffs == b.coeffs
    }
}

impl Eq for TruncSeries {}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (pos, c) in self.iter_units() {
                if c.is_zero() {
                    continue;
                }
                let neg = c.is_negative();
                let mag = c.abs();
                if first {
                    write!(f, "{}", if neg { "-" } else { "" })?;
                    first = false;
                } else {
                    write!(f, " {} ", if neg { "-" } else { "+" })?;
                }
                if pos == 0 {
                    write!(f, "{}", mag)?;
                } else if mag.is_one() {
                    write!(f, "q^{}", fmt_exp(pos, self.scale))?;
                } else {
                    write!(f, "{}*q^{}", mag, fmt_exp(pos, self.scale))?;
                }
            }
        }
        write!(f, " + O(q^{})", fmt_exp(self.trunc_order + 1, self.scale))
    }
}

// ----------------------------------------------------------------------
// serialization (golden-file format): coefficients as exact fraction strings
// ----------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    scale: i64,
    min_exp: i64,
    trunc_order: i64,
    coeffs: Vec<String>,
}

impl Serialize for TruncSeries {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            scale: self.scale,
            min_exp: self.min_exp,
            trunc_order: self.trunc_order,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TruncSeries {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(de)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| {
                BigRational::from_str(s)
                    .map_err(|e| serde::de::Error::custom(format!("bad coefficient {s:?}: {e}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if repr.scale < 1 {
            return Err(serde::de::Error::custom("scale must be positive"));
        }
        Ok(TruncSeries::from_parts(
            repr.scale,
            repr.min_exp,
            repr.trunc_order,
            coeffs,
        ))
    }
}

// ----------------------------------------------------------------------
// q-Pochhammer products
// ----------------------------------------------------------------------

/// Finite q-Pochhammer `(a; q^step)_n = prod_{k=0}^{n-1} (1 - a q^{k·step})`,
/// truncated modulo `q^{order+1}`.
pub fn pochhammer_finite_base(a: &Monomial, step: Exponent, n: u64, order: i64) -> TruncSeries {
    let scale = a.exp.denom().lcm(step.denom());
    let t = units(order, scale);
    let mut acc = TruncSeries::one(order).rescale(scale);
    let step_u = *(step * Exponent::from_integer(scale)).numer();
    let mut e = *(a.exp * Exponent::from_integer(scale)).numer();
    for _ in 0..n {
        acc = mul_pochhammer_factor(&acc, a.sign, e, t);
        e += step_u;
    }
    acc.reduce_scale()
}

/// Finite q-Pochhammer `(a; q)_n`.
pub fn pochhammer_finite(a: &Monomial, n: u64, order: i64) -> TruncSeries {
    pochhammer_finite_base(a, Exponent::one(), n, order)
}

/// Infinite q-Pochhammer `(a; q^step)_inf`, truncated modulo `q^{order+1}`.
///
/// Requires `step > 0` and `a.exp >= 0`; the argument `+q^0` makes the first
/// factor vanish identically.
pub fn pochhammer_infinite_base(a: &Monomial, step: Exponent, order: i64) -> Result<TruncSeries> {
    if step <= Exponent::zero() || a.exp.is_negative() {
        return Err(Error::DivergentProduct {
            start: a.exp.to_string(),
            step: step.to_string(),
        });
    }
    if a.exp.is_zero() && a.sign == Sign::Plus {
        return Err(Error::ZeroFactor);
    }
    let scale = a.exp.denom().lcm(step.denom());
    let t = units(order, scale);
    let step_u = *(step * Exponent::from_integer(scale)).numer();
    let mut e = *(a.exp * Exponent::from_integer(scale)).numer();
    let mut acc = TruncSeries::one(order).rescale(scale);
    while e <= t {
        acc = mul_pochhammer_factor(&acc, a.sign, e, t);
        e += step_u;
    }
    Ok(acc.reduce_scale())
}

/// Infinite q-Pochhammer `(a; q)_inf`.
pub fn pochhammer_infinite(a: &Monomial, order: i64) -> Result<TruncSeries> {
    pochhammer_infinite_base(a, Exponent::one(), order)
}

/// Euler product `(q; q)_inf`.
pub fn euler_product(order: i64) -> TruncSeries {
    pochhammer_infinite(&Monomial::q_power(1), order).expect("euler product converges")
}

/// `(q^m; q^m)_inf` for `m >= 1`.
pub fn euler_product_base(m: i64, order: i64) -> TruncSeries {
    assert!(m >= 1);
    pochhammer_infinite_base(
        &Monomial::q_power(m),
        Exponent::from_integer(m),
        order,
    )
    .expect("euler product converges")
}

/// Multiply by `(1 - sign·q^{e_units/scale})`, preserving the truncation
/// index `t` (the factor is exactly known).
fn mul_pochhammer_factor(acc: &TruncSeries, sign: Sign, e_units: i64, t: i64) -> TruncSeries {
    if e_units > t {
        return acc.clone();
    }
    if e_units == 0 {
        // 1 - (±1): either the constant 2 or identically zero
        return match sign {
            Sign::Minus => acc.scalar_mul(&Coeff::from_integer(BigInt::from(2))),
            Sign::Plus => TruncSeries::zero_scaled(acc.scale(), acc.trunc_units()),
        };
    }
    acc.mul_affine_unit(&-sign.coeff(), e_units)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Monomial {
        Monomial::q_power(1)
    }

    fn int(v: i64) -> Coeff {
        Coeff::from_integer(BigInt::from(v))
    }

    /// Independent partition-counting oracle: number of partitions of `n`
    /// into parts from `parts` (unbounded multiplicity).
    pub(crate) fn partitions_with_parts(parts: &[i64], n: usize) -> Vec<i64> {
        let mut dp = vec![0i64; n + 1];
        dp[0] = 1;
        for &p in parts {
            let p = p as usize;
            if p == 0 || p > n {
                continue;
            }
            for k in p..=n {
                dp[k] += dp[k - p];
            }
        }
        dp
    }

    #[test]
    fn add_identity_and_inverse() {
        let s = pochhammer_finite(&q(), 3, 10);
        assert_eq!(TruncSeries::zero(10).add(&s), s);
        let e = euler_product(12);
        assert!(e.add(&e.neg()).is_zero());
    }

    #[test]
    fn one_minus_q_plus_q() {
        let one_minus_q = pochhammer_finite(&q(), 1, 8);
        let qq = TruncSeries::monomial(&q(), 8);
        let sum = one_minus_q.add(&qq);
        assert_eq!(sum, TruncSeries::one(8));
    }

    #[test]
    fn mul_identity_and_geometric() {
        let s = pochhammer_finite(&Monomial::neg_q_power(1), 4, 9);
        assert_eq!(s.mul(&TruncSeries::one(9)), s);
        // (1 - q) * (1 + q + q^2 + ...) = 1
        let geo = pochhammer_finite(&q(), 1, 20).invert().unwrap();
        let prod = pochhammer_finite(&q(), 1, 20).mul(&geo);
        assert!(prod.agrees_to(&TruncSeries::one(20), 20));
    }

    #[test]
    fn euler_times_inverse_is_one() {
        // (q)_inf computed by direct product; inverse by formal inversion
        let e = euler_product(30);
        let inv = e.invert().unwrap();
        assert!(e.mul(&inv).agrees_to(&TruncSeries::one(30), 30));
    }

    #[test]
    fn euler_inverse_is_partition_generating_function() {
        let inv = euler_product(10).invert().unwrap();
        let parts: Vec<i64> = (1..=10).collect();
        let dp = partitions_with_parts(&parts, 10);
        for (k, &expected) in dp.iter().enumerate() {
            assert_eq!(inv.coeff_q(k as i64).unwrap(), int(expected), "p({k})");
        }
        // frozen values of the classical sequence
        assert_eq!(inv.coeff_range_q(10), [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42].map(int));
    }

    #[test]
    fn pochhammer_small_products() {
        // (a)_0 = 1
        assert_eq!(pochhammer_finite(&q(), 0, 5), TruncSeries::one(5));
        // (q; q)_2 = 1 - q - q^2 + q^3
        let p2 = pochhammer_finite(&q(), 2, 6);
        assert_eq!(p2.coeff_range_q(4), [1, -1, -1, 1, 0].map(int));
        // (-q; q)_3 = (1+q)(1+q^2)(1+q^3)
        let p3 = pochhammer_finite(&Monomial::neg_q_power(1), 3, 7);
        assert_eq!(p3.coeff_range_q(7), [1, 1, 1, 2, 1, 1, 1, 0].map(int));
    }

    #[test]
    fn euler_product_pentagonal_numbers() {
        let e = euler_product(12);
        assert_eq!(
            e.coeff_range_q(12),
            [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1].map(int)
        );
    }

    #[test]
    fn pochhammer_infinite_edge_cases() {
        // (-1; q)_inf = 2 (-q; q)_inf
        let a = pochhammer_infinite(&Monomial::minus_one(), 15).unwrap();
        let b = pochhammer_infinite(&Monomial::neg_q_power(1), 15)
            .unwrap()
            .scalar_mul(&int(2));
        assert_eq!(a, b);
        // (q^3; q)_inf truncated at T = 2 is 1
        let c = pochhammer_infinite(&Monomial::q_power(3), 2).unwrap();
        assert_eq!(c, TruncSeries::one(2));
        // divergent and zero-factor arguments are rejected
        assert!(matches!(
            pochhammer_infinite(&Monomial::q_power(-1), 5),
            Err(Error::DivergentProduct { .. })
        ));
        assert!(matches!(
            pochhammer_infinite(&Monomial::q_power(0), 5),
            Err(Error::ZeroFactor)
        ));
    }

    #[test]
    fn pochhammer_recurrence() {
        // (a; q)_{n+1} = (a; q)_n (1 - a q^n)
        for (sign, e) in [(Sign::Plus, 1), (Sign::Minus, 2), (Sign::Plus, 3)] {
            let a = Monomial::new(sign, Exponent::from_integer(e));
            for n in 0..20u64 {
                let lhs = pochhammer_finite(&a, n + 1, 25);
                let factor = TruncSeries::one(25).sub(&TruncSeries::monomial(
                    &a.mul(&Monomial::q_power(n as i64)),
                    25,
                ));
                let rhs = pochhammer_finite(&a, n, 25).mul(&factor);
                assert!(lhs.agrees_to(&rhs, 25));
            }
        }
    }

    #[test]
    fn invert_min_exp_and_laurent() {
        // invert(q^2 * (1 - q)) has min_exp -2
        let s = TruncSeries::monomial(&Monomial::q_power(2), 12)
            .mul(&pochhammer_finite(&q(), 1, 12));
        let inv = s.invert().unwrap();
        assert_eq!(inv.min_exp(), Some(Exponent::from_integer(-2)));
        let prod = s.mul(&inv);
        assert!(prod.agrees_to(&TruncSeries::one(prod.order_q()), prod.order_q()));
        assert!(matches!(TruncSeries::zero(5).invert(), Err(Error::ZeroDivisor)));
    }

    #[test]
    fn rescale_round_trip() {
        let s = euler_product(9);
        assert_eq!(s.rescale(4).reduce_scale(), s);
        let m = Monomial::new(Sign::Minus, Exponent::new(3, 4));
        let t = TruncSeries::monomial(&m, 5);
        assert_eq!(t.scale(), 4);
        assert_eq!(t.rescale(3).reduce_scale(), t);
    }

    #[test]
    fn mixed_scale_arithmetic() {
        // q^(1/2) * q^(1/2) = q
        let h = TruncSeries::monomial(&Monomial::new(Sign::Plus, Exponent::new(1, 2)), 6);
        let prod = h.mul(&h).reduce_scale();
        assert_eq!(prod, TruncSeries::monomial(&q(), 6));
    }

    #[test]
    fn truncation_propagation() {
        let a = euler_product(10);
        let b = euler_product(4);
        assert_eq!(a.add(&b).order_q(), 4);
        assert_eq!(a.mul(&b).order_q(), 4);
        // multiplying by q^3 pushes the known window up
        let shifted = b.mul_monomial(&Monomial::q_power(3));
        assert_eq!(shifted.order_q(), 7);
        assert_eq!(a.mul(&shifted).order_q(), 7);
    }

    #[test]
    fn json_round_trip_exact_fractions() {
        let s = euler_product(8)
            .invert()
            .unwrap()
            .scalar_mul(&Coeff::new(BigInt::from(1), BigInt::from(2)));
        let js = serde_json::to_string(&s).unwrap();
        assert!(js.contains("1/2"), "fractions serialized exactly: {js}");
        let back: TruncSeries = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn display_readable() {
        let s = pochhammer_finite(&q(), 2, 4);
        assert_eq!(s.to_string(), "1 - q^1 - q^2 + q^3 + O(q^5)");
    }
}
