//! Hecke-type double sums `f_{a,b,c}(x,y,q)`, Appell-Lerch sums `m(x,q,z)`,
//! their combination `g_{a,b,c}` and the theta block `theta_{n,p}` — the two
//! sides of the expansion of an indefinite-quadratic-form double sum into
//! Appell-Lerch and theta parts.
//!
//! Truncation is provably sound: for every row of a bilateral double sum the
//! minimum exponent over the column index is computed in closed form, and
//! rows stop only once the row minimum both exceeds the target order and is
//! past the regime where it provably increases.

use num::integer::Integer;
use num::Zero;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::series::{Coeff, Exponent, Monomial, Sign, TruncSeries};
use crate::theta::{expand_j, j_min_exp, normalize_j, JSymbol, QuotientTerm};

/// Parameters of the Hecke-type series `f_{a,b,c}(x,y,q)` with `x`, `y`
/// substituted by signed powers of `q`.
#[derive(Clone, Copy, Debug)]
pub struct HeckeParams {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub x: Monomial,
    pub y: Monomial,
}

impl HeckeParams {
    pub fn new(a: i64, b: i64, c: i64, x: Monomial, y: Monomial) -> Self {
        HeckeParams { a, b, c, x, y }
    }
}

/// Arguments of the Appell-Lerch sum `m(x, q^M, z)`.
#[derive(Clone, Copy, Debug)]
pub struct AppellArgs {
    pub x: Monomial,
    /// The sum runs in base `q^M`.
    pub modulus_exp: i64,
    pub z: Monomial,
}

fn ceil_div(p: i128, q: i128) -> i128 {
    debug_assert!(q > 0);
    p.div_euclid(q) + if p.rem_euclid(q) != 0 { 1 } else { 0 }
}

fn binom2(r: i128) -> i128 {
    r * (r - 1) / 2
}

/// Scaled integer exponent of a monomial on the `1/scale` grid.
fn exp_units(e: Exponent, scale: i64) -> i64 {
    let s = e * Exponent::from_integer(scale);
    debug_assert!(s.is_integer());
    *s.numer()
}

// ----------------------------------------------------------------------
// f_{a,b,c}
// ----------------------------------------------------------------------

/// The Hecke-type series
/// `f_{a,b,c}(x,y,q) = (sum_{r,s>=0} - sum_{r,s<0}) (-1)^{r+s} x^r y^s
/// q^{a·C(r,2) + b·r·s + c·C(s,2)}`, truncated modulo `q^{order+1}`.
pub fn hecke_f(p: &HeckeParams, order: i64) -> Result<TruncSeries> {
    hecke_f_with_slack(p, order, 0)
}

/// Same as [`hecke_f`] but scanning out to `order + slack`; used to confirm
/// that enlarging the summation radius changes nothing below the truncation.
pub fn hecke_f_with_slack(p: &HeckeParams, order: i64, slack: i64) -> Result<TruncSeries> {
    if p.a < 1 || p.b < 1 || p.c < 1 {
        return Err(Error::NonTruncatable {
            params: format!("a={}, b={}, c={} (need a,b,c >= 1)", p.a, p.b, p.c),
        });
    }
    assert!(slack >= 0);
    let scan_order = order + slack;
    let scale = p.x.exp.denom().lcm(p.y.exp.denom());
    let ex = exp_units(p.x.exp, scale) as i128;
    let ey = exp_units(p.y.exp, scale) as i128;
    let (a, b, c) = (
        p.a as i128 * scale as i128,
        p.b as i128 * scale as i128,
        p.c as i128 * scale as i128,
    );
    let t_scan = scan_order as i128 * scale as i128;
    // twice the coefficient, so the 1/2-free case stays in integers
    let mut acc: BTreeMap<i64, i64> = BTreeMap::new();
    let mut put = |e: i128, sgn: i64| {
        *acc.entry(e.try_into().expect("exponent overflow")).or_insert(0) += 2 * sgn;
    };

    const ROW_CAP: i128 = 10_000_000;

    // quadrant r, s >= 0
    let q_pos = |r: i128, s: i128| a * binom2(r) + b * r * s + c * binom2(s) + r * ex + s * ey;
    // row minimum provably nondecreasing once the vertex is at s <= 0 and
    // Q(r,0) is nondecreasing in r
    let r_free = ceil_div(c - 2 * ey, 2 * b).max(ceil_div(-ex, a)).max(0);
    let mut r: i128 = 0;
    loop {
        // integer minimizer of the parabola Q(r, ·) clamped to s >= 0
        let s0 = (c - 2 * (ey + b * r)).div_euclid(2 * c).max(0);
        let row_min = q_pos(r, s0).min(q_pos(r, s0 + 1));
        if row_min > t_scan {
            if r >= r_free {
                break;
            }
        } else {
            let sgn_r = Sign::Minus.pow(r as i64).mul(p.x.sign.pow(r as i64));
            // downward from s0, then upward from s0+1
            let mut s = s0;
            while s >= 0 && q_pos(r, s) <= t_scan {
                let sg = sgn_r.mul(Sign::Minus.pow(s as i64)).mul(p.y.sign.pow(s as i64));
                put(q_pos(r, s), sg.as_i64());
                s -= 1;
            }
            let mut s = s0 + 1;
            while q_pos(r, s) <= t_scan {
                let sg = sgn_r.mul(Sign::Minus.pow(s as i64)).mul(p.y.sign.pow(s as i64));
                put(q_pos(r, s), sg.as_i64());
                s += 1;
            }
        }
        r += 1;
        if r > ROW_CAP {
            return Err(Error::NonTruncatable {
                params: format!("a={}, b={}, c={}, x={}, y={}", p.a, p.b, p.c, p.x, p.y),
            });
        }
    }

    // quadrant r, s < 0 with r = -u, s = -v (u, v >= 1), subtracted
    let q_neg = |u: i128, v: i128| {
        a * u * (u + 1) / 2 + b * u * v + c * v * (v + 1) / 2 - u * ex - v * ey
    };
    let u_free = ceil_div(2 * ey - 3 * c, 2 * b).max(ceil_div(ex - b - a, a)).max(1);
    let mut u: i128 = 1;
    loop {
        let v0 = (2 * ey - c - 2 * b * u).div_euclid(2 * c).max(1);
        let row_min = q_neg(u, v0).min(q_neg(u, v0 + 1));
        if row_min > t_scan {
            if u >= u_free {
                break;
            }
        } else {
            let sgn_u = Sign::Minus.pow(u as i64).mul(p.x.sign.pow(u as i64));
            let mut v = v0;
            while v >= 1 && q_neg(u, v) <= t_scan {
                let sg = sgn_u.mul(Sign::Minus.pow(v as i64)).mul(p.y.sign.pow(v as i64));
                put(q_neg(u, v), -sg.as_i64());
                v -= 1;
            }
            let mut v = v0 + 1;
            while q_neg(u, v) <= t_scan {
                let sg = sgn_u.mul(Sign::Minus.pow(v as i64)).mul(p.y.sign.pow(v as i64));
                put(q_neg(u, v), -sg.as_i64());
                v += 1;
            }
        }
        u += 1;
        if u > ROW_CAP {
            return Err(Error::NonTruncatable {
                params: format!("a={}, b={}, c={}, x={}, y={}", p.a, p.b, p.c, p.x, p.y),
            });
        }
    }

    let map: BTreeMap<i64, Coeff> = acc
        .into_iter()
        .filter(|(_, n)| *n != 0)
        .map(|(e, n)| (e, Coeff::new(n.into(), 2.into())))
        .collect();
    let trunc = (scan_order + 1) * scale - 1;
    Ok(TruncSeries::from_map(scale, &map, trunc).reduce_scale())
}

// ----------------------------------------------------------------------
// Appell-Lerch sums
// ----------------------------------------------------------------------

/// Check the pole-freedom invariant: neither `z` nor `x·z` may be a positive
/// integral power of the base `q^M` (the former zeroes the theta prefactor
/// `j(z; q^M)`, the latter makes some denominator `1 - q^{M(r-1)} x z`
/// vanish).
pub fn appell_pole_check(args: &AppellArgs) -> Result<()> {
    let m = args.modulus_exp;
    if m < 1 {
        return Err(Error::RangeError(format!(
            "Appell-Lerch base exponent must be positive, got {m}"
        )));
    }
    let m_exp = Exponent::from_integer(m);
    if args.z.sign == Sign::Plus && (args.z.exp / m_exp).is_integer() {
        return Err(Error::PoleError {
            arg: format!("z = {}", args.z),
            modulus: m,
        });
    }
    let xz = args.x.mul(&args.z);
    if xz.sign == Sign::Plus && (xz.exp / m_exp).is_integer() {
        return Err(Error::PoleError {
            arg: format!("x·z = {}", xz),
            modulus: m,
        });
    }
    Ok(())
}

/// The Appell-Lerch sum
/// `m(x, q^M, z) = (1/j(z; q^M)) sum_{r in Z} (-1)^r q^{M·C(r,2)} z^r /
/// (1 - q^{M(r-1)} x z)`, truncated modulo `q^{order+1}`.
///
/// Every denominator is expanded as a geometric (or, for negative exponents,
/// reversed-geometric) series; a denominator that degenerates to `1 - q^0`
/// with positive sign is a pole, while `1 + 1` contributes the exact
/// coefficient `1/2` (which is why coefficients are rationals).
pub fn appell_m(args: &AppellArgs, order: i64) -> Result<TruncSeries> {
    appell_pole_check(args)?;
    if !args.z.exp.is_integer() {
        return Err(Error::FractionalExponent {
            exp: args.z.exp.to_string(),
            context: "Appell-Lerch z must be an integer power of q".into(),
        });
    }
    let m = args.modulus_exp;
    let zsym = JSymbol::new(args.z.sign, *args.z.exp.numer(), m);
    let mu_j = j_min_exp(&zsym).expect("pole check rejects vanishing j(z; q^M)");

    // The result is S · j(z; q^M)^{-1}; computing S out to order + mu_j makes
    // the product exact modulo q^{order+1}.
    let sum_order = order + mu_j;
    let scale = *args.x.exp.denom();
    let e = exp_units(args.x.exp, scale) as i128;
    let f = exp_units(args.z.exp, scale) as i128;
    let m_u = m as i128 * scale as i128;
    let t_scan = sum_order as i128 * scale as i128;
    let eps = args.x.sign.mul(args.z.sign);

    let mut acc: BTreeMap<i64, Coeff> = BTreeMap::new();
    let mut saw_half_denominator = false;
    let mut put = |exp: i128, c: Coeff| {
        if exp <= t_scan {
            let slot = acc
                .entry(exp.try_into().expect("exponent overflow"))
                .or_insert_with(Coeff::zero);
            *slot += c;
        }
    };

    let base_exp = |r: i128| m_u * binom2(r) + r * f;
    let denom_exp = |r: i128| m_u * (r - 1) + e + f;
    let row_min = |r: i128| base_exp(r) + (-denom_exp(r)).max(0);
    let mut expand_row = |r: i128| {
        let sgn = Sign::Minus.pow(r as i64).mul(args.z.sign.pow(r as i64));
        let b = base_exp(r);
        let d = denom_exp(r);
        if d > 0 {
            // 1/(1 - eps q^d) = sum_{k>=0} eps^k q^{kd}
            let mut k = 0i128;
            while b + k * d <= t_scan {
                put(b + k * d, sgn.mul(eps.pow(k as i64)).coeff());
                k += 1;
            }
        } else if d == 0 {
            debug_assert_eq!(eps, Sign::Minus, "pole check rejects eps = +1 at d = 0");
            saw_half_denominator = true;
            put(b, sgn.coeff() * Coeff::new(1.into(), 2.into()));
        } else {
            // 1/(1 - eps q^d) = -sum_{j>=1} eps^j q^{|d| j}
            let ad = -d;
            let mut j = 1i128;
            while b + j * ad <= t_scan {
                put(b + j * ad, -sgn.mul(eps.pow(j as i64)).coeff());
                j += 1;
            }
        }
    };

    const ROW_CAP: i128 = 10_000_000;
    // upward: past r_up both d >= 0 and the base exponent is nondecreasing
    let r_up = ceil_div(m_u - e - f, m_u).max(ceil_div(-f, m_u)).max(1);
    let mut r: i128 = 0;
    loop {
        if row_min(r) > t_scan {
            if r >= r_up {
                break;
            }
        } else {
            expand_row(r);
        }
        r += 1;
        if r > ROW_CAP {
            return Err(Error::NonTruncatable {
                params: format!("m({}, q^{}, {})", args.x, m, args.z),
            });
        }
    }
    // downward: past r_dn both d < 0 and the row minimum is nondecreasing
    // going down (m(2-r) >= f)
    let mut r: i128 = -1;
    loop {
        let free = denom_exp(r) < 0 && m_u * (2 - r) >= f;
        if row_min(r) > t_scan {
            if free {
                break;
            }
        } else {
            expand_row(r);
        }
        r -= 1;
        if r < -ROW_CAP {
            return Err(Error::NonTruncatable {
                params: format!("m({}, q^{}, {})", args.x, m, args.z),
            });
        }
    }

    let sum = TruncSeries::from_map(scale, &acc, (sum_order + 1) * scale - 1);
    let mu_sum = sum
        .min_exp()
        .map(|e| e.floor().to_integer())
        .unwrap_or(0)
        .min(0);
    let jz = expand_j(&zsym, order - mu_sum + mu_j.max(0));
    let result = sum.mul(&jz.invert()?).truncate_to(order);
    assert!(
        result.is_known_to(order),
        "Appell-Lerch truncation bookkeeping fell short: got {}, need {} (sum T {}, mu_sum {}, mu_j {}, jz T {})",
        result.trunc_units(),
        order,
        sum.trunc_units(),
        mu_sum,
        mu_j,
        jz.trunc_units(),
    );
    if args.z == Monomial::minus_one() && !saw_half_denominator {
        // with z = -1 the only source of halves is 1/j(-1; q^M), whose
        // leading coefficient is 1/2: the doubled series is integral
        let doubled = result.scalar_mul(&Coeff::from_integer(2.into()));
        assert!(
            doubled.all_integer(),
            "doubled Appell-Lerch series must be integral for z = -1"
        );
    }
    Ok(result)
}

// ----------------------------------------------------------------------
// g_{a,b,c}
// ----------------------------------------------------------------------

/// Diagnostics for one term of [`hecke_g`].
#[derive(Clone, Debug)]
pub struct GTermReport {
    /// 0 for the sum over `t < a`, 1 for the sum over `t < c`.
    pub sum_index: u8,
    pub t: i64,
    /// The theta prefactor `j(q^{bt}x; q^a)` (resp. `j(q^{bt}y; q^c)`)
    /// vanishes identically, short-circuiting the term to zero.
    pub theta_vanishes: bool,
    /// The Appell-Lerch factor passes the pole-freedom check (verified even
    /// for short-circuited terms).
    pub pole_free: bool,
    pub appell_x: Monomial,
    pub appell_modulus: i64,
}

/// `g_{a,b,c}(x,y,q,z1,z0)`: two `t`-sums of theta-prefactored Appell-Lerch
/// terms. A term whose theta prefactor vanishes identically contributes zero
/// without its Appell-Lerch factor being evaluated; a pole in a term with
/// nonvanishing prefactor is an error.
pub fn hecke_g(
    p: &HeckeParams,
    z1: &Monomial,
    z0: &Monomial,
    order: i64,
) -> Result<TruncSeries> {
    Ok(hecke_g_with_report(p, z1, z0, order)?.0)
}

/// [`hecke_g`] plus per-term diagnostics.
pub fn hecke_g_with_report(
    p: &HeckeParams,
    z1: &Monomial,
    z0: &Monomial,
    order: i64,
) -> Result<(TruncSeries, Vec<GTermReport>)> {
    let disc = p.b as i128 * p.b as i128 - p.a as i128 * p.c as i128;
    if p.a < 1 || p.b < 1 || p.c < 1 || disc <= 0 {
        return Err(Error::RangeError(format!(
            "g requires a, b, c >= 1 and b^2 - ac > 0; got a={}, b={}, c={}",
            p.a, p.b, p.c
        )));
    }
    for (name, mono) in [("x", &p.x), ("y", &p.y)] {
        if !mono.exp.is_integer() {
            return Err(Error::FractionalExponent {
                exp: mono.exp.to_string(),
                context: format!("{name} must be an integer power of q in g"),
            });
        }
    }
    let disc = disc as i64;
    let mut acc = TruncSeries::zero(order);
    let mut reports = Vec::new();

    // the two sums are mirror images under (a <-> c, x <-> y, z0 <-> z1)
    for (idx, (aa, cc, xx, yy, zz)) in
        [(p.a, p.c, p.x, p.y, *z0), (p.c, p.a, p.y, p.x, *z1)].iter().enumerate()
    {
        let (aa, cc) = (*aa, *cc);
        for t in 0..aa {
            // (-y)^t q^{c·C(t,2)}
            let mono = Monomial::new(
                yy.sign.mul(Sign::Minus).pow(t),
                yy.exp * Exponent::from_integer(t)
                    + Exponent::from_integer(cc * (t * (t - 1) / 2)),
            );
            let jsym = JSymbol::new(xx.sign, p.b * t + *xx.exp.numer(), aa);
            // -q^{a·C(b+1,2) - c·C(a+1,2) - t(b^2-ac)} (-y)^a / (-x)^b
            let arg_exp128 = aa as i128 * binom2(p.b as i128 + 1)
                - cc as i128 * binom2(aa as i128 + 1)
                - t as i128 * disc as i128
                + aa as i128 * *yy.exp.numer() as i128
                - p.b as i128 * *xx.exp.numer() as i128;
            let arg = Monomial::new(
                Sign::Minus
                    .mul(yy.sign.mul(Sign::Minus).pow(aa))
                    .mul(xx.sign.mul(Sign::Minus).pow(p.b)),
                Exponent::from_integer(arg_exp128.try_into().expect("g exponent overflow")),
            );
            let args = AppellArgs {
                x: arg,
                modulus_exp: aa
                    .checked_mul(disc)
                    .expect("Appell base exponent overflow"),
                z: *zz,
            };
            let pole_free = appell_pole_check(&args).is_ok();
            let theta_vanishes = normalize_j(&jsym).is_zero;
            reports.push(GTermReport {
                sum_index: idx as u8,
                t,
                theta_vanishes,
                pole_free,
                appell_x: args.x,
                appell_modulus: args.modulus_exp,
            });
            if theta_vanishes {
                continue;
            }
            appell_pole_check(&args)?;
            let mono_exp = *mono.exp.numer();
            let mu_j = j_min_exp(&jsym).expect("nonvanishing prefactor");
            let m_ser = appell_m(&args, order - mono_exp - mu_j)?;
            let mu_m = m_ser
                .min_exp()
                .map(|e| e.floor().to_integer())
                .unwrap_or(0)
                .min(0);
            let j_ser = expand_j(&jsym, order - mono_exp - mu_m);
            let term = j_ser.mul(&m_ser).mul_monomial(&mono);
            acc = acc.add(&term.truncate_to(order));
        }
    }
    Ok((acc.truncate_to(order), reports))
}

// ----------------------------------------------------------------------
// theta_{n,p}
// ----------------------------------------------------------------------

/// Assemble the `p^2` quotient terms of `theta_{n,p}(x,y,q)`.
///
/// Index shifts: `r = r* + {(n-1)/2}`, `s = s* + {(n-1)/2}`; the combined
/// exponents are asserted to land on the integer grid (they do for every
/// admissible `n`, including the half-integer shifts at even `n`).
pub(crate) fn theta_block_terms(
    n: i64,
    p: i64,
    x: &Monomial,
    y: &Monomial,
) -> Result<Vec<QuotientTerm>> {
    if n < 1 || p < 1 || n.gcd(&p) != 1 {
        return Err(Error::RangeError(format!(
            "theta block needs coprime positive n, p; got n={n}, p={p}"
        )));
    }
    let half = Exponent::new(1, 2);
    let frac = if n % 2 == 1 { Exponent::zero() } else { half };
    let nm1_half = Exponent::new(n - 1, 2);
    let np1_half = Exponent::new(n + 1, 2);
    let as_int = |e: Exponent, ctx: &str| -> Result<i64> {
        if e.is_integer() {
            Ok(*e.numer())
        } else {
            Err(Error::FractionalExponent {
                exp: e.to_string(),
                context: ctx.to_string(),
            })
        }
    };
    let base = p * p * (2 * n + p);
    let mut terms = Vec::with_capacity((p * p) as usize);
    for r_star in 0..p {
        for s_star in 0..p {
            let r = Exponent::from_integer(r_star) + frac;
            let s = Exponent::from_integer(s_star) + frac;
            let rr = as_int(r - nm1_half, "theta exponent r - (n-1)/2")?;
            let ss = as_int(s + np1_half, "theta exponent s + (n+1)/2")?;
            // q-exponent n·C(R,2) + (n+p)·R·S + n·C(S,2) + R·ex + S·ey
            let e0 = n as i128 * binom2(rr as i128)
                + (n + p) as i128 * rr as i128 * ss as i128
                + n as i128 * binom2(ss as i128);
            let e0 = Exponent::from_integer(e0.try_into().expect("theta exponent overflow"))
                + x.exp * Exponent::from_integer(rr)
                + y.exp * Exponent::from_integer(ss);
            let sign0 = x.sign.mul(Sign::Minus).pow(rr).mul(y.sign.mul(Sign::Minus).pow(ss));
            let mut term = QuotientTerm::new(sign0, as_int(e0, "theta term exponent")?);
            term.num_euler_pow(base, 3);
            // j(-q^{np(s-r)} x^n/y^n; q^{np^2})
            term.num_j(JSymbol::new(
                Sign::Minus.mul(x.sign.pow(n)).mul(y.sign.pow(n)),
                as_int(
                    Exponent::from_integer(n * p * (s_star - r_star))
                        + (x.exp - y.exp) * Exponent::from_integer(n),
                    "first numerator symbol",
                )?,
                n * p * p,
            ));
            // j(q^{p(2n+p)(r+s) + p(n+p)} (xy)^p; q^{p^2(2n+p)})
            term.num_j(JSymbol::new(
                x.sign.mul(y.sign).pow(p),
                as_int(
                    Exponent::from_integer(p * (2 * n + p)) * (r + s)
                        + Exponent::from_integer(p * (n + p))
                        + (x.exp + y.exp) * Exponent::from_integer(p),
                    "second numerator symbol",
                )?,
                base,
            ));
            // j(q^{p(2n+p)r + p(n+p)/2} (-y)^{n+p}/(-x)^n; q^{p^2(2n+p)}) and
            // the mirror with r <-> s, x <-> y
            let den = |idx: Exponent, em: &Monomial, eo: &Monomial| -> Result<JSymbol> {
                Ok(JSymbol::new(
                    Sign::Minus.pow(p).mul(eo.sign.pow(n)).mul(em.sign.pow(n + p)),
                    as_int(
                        Exponent::from_integer(p * (2 * n + p)) * idx
                            + Exponent::new(p * (n + p), 2)
                            + em.exp * Exponent::from_integer(n + p)
                            - eo.exp * Exponent::from_integer(n),
                        "denominator symbol",
                    )?,
                    base,
                ))
            };
            for (sym, rs) in [(den(r, y, x)?, r_star), (den(s, x, y)?, s_star)] {
                term.den_j(sym).map_err(|sym| Error::ZeroDenominator {
                    symbol: sym.to_string(),
                    r: if rs == r_star { r_star } else { s_star },
                    s: s_star,
                })?;
            }
            terms.push(term);
        }
    }
    Ok(terms)
}

/// The theta block `theta_{n,p}(x,y,q)` of the `f = g + theta/Jbar`
/// expansion, truncated modulo `q^{order+1}`.
pub fn theta_block(n: i64, p: i64, x: &Monomial, y: &Monomial, order: i64) -> Result<TruncSeries> {
    let terms = theta_block_terms(n, p, x, y)?;
    let mut acc = TruncSeries::zero(order);
    for term in &terms {
        acc = acc.add(&term.eval_series(order)?);
    }
    Ok(acc)
}

// ----------------------------------------------------------------------
// the f = g + theta/Jbar verification
// ----------------------------------------------------------------------

/// Outcome of [`verify_hm`]: whether the two sides agree modulo
/// `q^{order+1}`, plus the difference series for diagnostics.
#[derive(Clone, Debug)]
pub struct HmVerification {
    pub ok: bool,
    pub discrepancy: TruncSeries,
}

/// Check `f_{n,n+p,n}(x,y,q) = g_{n,n+p,n}(x,y,q,-1,-1) +
/// theta_{n,p}(x,y,q) / Jbar_{0,np(2n+p)}` modulo `q^{order+1}`.
///
/// The three pieces are computed by independent code paths (bilateral double
/// sum; Appell-Lerch assembly; canonical theta quotients).
pub fn verify_hm(n: i64, p: i64, x: &Monomial, y: &Monomial, order: i64) -> Result<HmVerification> {
    if n < 1 || p < 1 || n.gcd(&p) != 1 {
        return Err(Error::RangeError(format!(
            "verify_hm needs coprime positive n, p; got n={n}, p={p}"
        )));
    }
    let params = HeckeParams::new(n, n + p, n, *x, *y);
    let lhs = hecke_f(&params, order)?;
    let minus_one = Monomial::minus_one();
    let g = hecke_g(&params, &minus_one, &minus_one, order)?;
    let theta = theta_block(n, p, x, y, order)?;
    let mu_theta = theta
        .min_exp()
        .map(|e| e.floor().to_integer())
        .unwrap_or(0)
        .min(0);
    let jbar = expand_j(&JSymbol::jbar(0, n * p * (2 * n + p)), order - mu_theta);
    let rhs = g.add(&theta.mul(&jbar.invert()?)).truncate_to(order);
    let discrepancy = lhs.sub(&rhs).truncate_to(order);
    Ok(HmVerification {
        ok: discrepancy.is_zero() && discrepancy.is_known_to(order),
        discrepancy,
    })
}

/// Scan small positive-exponent monomials for an (x, y) pair that is generic
/// for `(n, p)`: integral theta-block exponents, nonvanishing denominators,
/// and pole-free Appell-Lerch arguments. Purely a pole/zero/integrality
/// check — no series are expanded.
pub fn find_admissible_monomials(n: i64, p: i64) -> Option<(Monomial, Monomial)> {
    let minus_one = Monomial::minus_one();
    for total in 2..=16 {
        for ex in 1..total {
            let ey = total - ex;
            let x = Monomial::q_power(ex);
            let y = Monomial::q_power(ey);
            if theta_block_terms(n, p, &x, &y).is_err() {
                continue;
            }
            let params = HeckeParams::new(n, n + p, n, x, y);
            match hecke_g_with_report(&params, &minus_one, &minus_one, -1) {
                Ok((_, reports)) if reports.iter().all(|r| r.pole_free) => {
                    return Some((x, y));
                }
                _ => continue,
            }
        }
    }
    None
}
