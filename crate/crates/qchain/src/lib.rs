//! Exact q-series engine for a family of finite-chain-ring multisums.
//!
//! The central object is the multisum `B_N(q)`: a sum over `(N-1)`-tuples of
//! partial sums `K_2 <= ... <= K_N` with `N | K_2 + ... + K_N`, weighted by
//! `q^{K_2^2+...+K_N^2 - (K_2+...+K_N)^2/N}` over products of q-Pochhammer
//! symbols. The crate computes it three independent ways and checks them
//! equal coefficient-by-coefficient at any truncation order:
//!
//! * [`identities::bn_multisum`] — direct pruned enumeration;
//! * [`identities::bn_hecke`] — `q^{-m^2/4N}/(q)_inf^2 ·
//!   f_{1,N+1,1}(q^{1+m/2}, q^{1-m/2}, q)` for any `m` divisible by `2N`;
//! * [`identities::bn_theta`] — a sum of `N^2` products of quotients of theta
//!   functions, divided by `(q)_inf^2 · Jbar_{0,N(N+2)}`.
//!
//! Supporting machinery: an exact truncated Laurent ring over big rationals
//! ([`series`]), theta symbols `j(x;q)` with quasi-periodic normalization and
//! a triple-product oracle ([`theta`]), Hecke-type double sums, Appell-Lerch
//! sums and the `f = g + theta/Jbar` expansion ([`hecke`]), level-`N` string
//! functions and the Andrews-Gordon identities ([`identities`]), and
//! arbitrary-precision numeric evaluation of the theta formula at rational
//! `q`, reproducing the reference grid including `N = 100` ([`numeric`]).
//!
//! Start with the runnable examples (`cargo run --example theorem1`, ...);
//! the `qchain` binary exposes the same entry points as `verify` / `series` /
//! `eval` / `bench` subcommands.

pub mod cli;
pub mod error;
pub mod hecke;
pub mod identities;
pub mod numeric;
pub mod series;
pub mod theta;

pub use error::{Error, Result};
pub use series::{Coeff, Exponent, Monomial, Sign, TruncSeries};
pub use theta::{expand_j, j_list, normalize_j, triple_product_oracle, JSymbol, NormalizedJ};
