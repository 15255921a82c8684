//! Product expansions for resonator moments and their Dirichlet series.
//!
//! A product of coefficients `A(m_1^2, 1) ... A(m_k^2, 1) A(1, n_1^2) ...`
//! collapses, by repeated application of the one-sided Hecke expansion, to a
//! single sum of coefficients `A(M, N)` over divisor chains.  The chain
//! state `(M, N)` starts at `(1, 1)` and absorbs one list entry per step:
//! an m-entry contributes every splitting `d0*d1*d2 = m^2` with `d1 | M`,
//! `d2 | N` and moves the state to `(M*d0/d1, N*d1/d2)`, while an n-entry
//! uses the transposed move `(M*d2/d1, N*d0/d2)` under the same constraint.
//! Squaring the expanded sum and matching end states prime-by-prime yields
//! an Euler product whose coefficients `c_r` are pure chain counts; this
//! module computes both the expansion and the counts by exhaustive
//! enumeration.

use crate::arith::divisors;
use crate::hecke::{CoefficientSource, HeckeError, LocalKind};
use crate::report::{elapsed_ms, VerificationReport};
use crate::{C, F};
use serde_json::json;
use std::collections::BTreeMap;
use std::time::Instant;
use thiserror::Error;

/// Largest list entry the expander accepts; keeps the chain states inside
/// `u64` even for four maximal entries.
pub const MAX_ENTRY: u64 = 30;

/// Largest list length; the chain count grows geometrically with it.
pub const MAX_LIST: usize = 4;

#[derive(Debug, Error)]
pub enum ResonatorError {
    #[error("lists carry at most {MAX_LIST} entries, got {0}")]
    ListTooLong(usize),
    #[error("entry {0} outside 1..={MAX_ENTRY}")]
    BadEntry(u64),
    #[error("entry {0} must be odd")]
    EvenEntry(u64),
    #[error("entry {0} touches the prime {1} with non-generic local data")]
    RamifiedEntry(u64, u64),
    #[error("moment order {0} outside 1..=3")]
    BadOrder(u32),
    #[error("coefficient order {0} outside 0..=6")]
    BadSeriesOrder(u32),
    #[error(transparent)]
    Coefficient(#[from] HeckeError),
}

/// Divisor-chain end states of the expanded product, with multiplicities.
/// `m_list` entries are absorbed first, then `n_list` entries through the
/// transposed move.
pub fn chain_states(m_list: &[u64], n_list: &[u64]) -> BTreeMap<(u64, u64), u64> {
    let mut states = BTreeMap::from([((1u64, 1u64), 1u64)]);
    for &m in m_list {
        states = chain_step(&states, m * m, false);
    }
    for &n in n_list {
        states = chain_step(&states, n * n, true);
    }
    states
}

fn chain_step(
    states: &BTreeMap<(u64, u64), u64>,
    sq: u64,
    transpose: bool,
) -> BTreeMap<(u64, u64), u64> {
    let mut next = BTreeMap::new();
    for (&(m, n), &count) in states {
        for d0 in divisors(sq) {
            for d1 in divisors(sq / d0) {
                let d2 = sq / d0 / d1;
                if m % d1 != 0 || n % d2 != 0 {
                    continue;
                }
                let state = if transpose {
                    (m / d1 * d2, n / d2 * d0)
                } else {
                    (m / d1 * d0, n / d2 * d1)
                };
                *next.entry(state).or_insert(0) += count;
            }
        }
    }
    next
}

fn validate_list(list: &[u64], src: &CoefficientSource) -> Result<(), ResonatorError> {
    if list.len() > MAX_LIST {
        return Err(ResonatorError::ListTooLong(list.len()));
    }
    for &m in list {
        if m < 1 || m > MAX_ENTRY {
            return Err(ResonatorError::BadEntry(m));
        }
        if m % 2 == 0 {
            return Err(ResonatorError::EvenEntry(m));
        }
        for (p, _) in crate::arith::factorize(m) {
            match src.triple(p).map(|t| &t.kind) {
                Some(LocalKind::Unramified) | None => {}
                Some(_) => return Err(ResonatorError::RamifiedEntry(m, p)),
            }
        }
    }
    Ok(())
}

/// Expands `prod_j A(m_j^2, 1) * prod_j A(1, n_j^2)` through divisor chains
/// and compares against the direct product of coefficients.
pub fn resonator_expand(
    src: &CoefficientSource,
    m_list: &[u64],
    n_list: &[u64],
) -> Result<VerificationReport, ResonatorError> {
    let start = Instant::now();
    validate_list(m_list, src)?;
    validate_list(n_list, src)?;
    let mut direct = C::new(1.0, 0.0);
    for &m in m_list {
        direct *= src.coefficient(m * m, 1)?;
    }
    for &n in n_list {
        direct *= src.coefficient(1, n * n)?;
    }
    let mut expanded = C::new(0.0, 0.0);
    for (&(m, n), &count) in &chain_states(m_list, n_list) {
        expanded += src.coefficient(m, n)? * count as F;
    }
    let tol = 1e-9 * direct.norm().max(expanded.norm()).max(1.0);
    Ok(VerificationReport::compare(
        "resonator",
        "product-expansion",
        json!({ "m": m_list, "n": n_list }),
        direct,
        expanded,
        tol,
        elapsed_ms(start),
    ))
}

/// Euler-factor coefficients `c_0..c_r_max` of the squared expansion at one
/// prime: `c_r` counts the pairs of divisor chains over exponent vectors
/// `(x_1..x_k)`, `(y_1..y_k)` of total weight `r` whose end states agree.
/// The count is a structural quantity; it does not depend on the prime,
/// which the caller can (and the test suite does) verify by sampling.
pub fn dseries_euler_coefficients(
    k: u32,
    p: u64,
    r_max: u32,
) -> Result<Vec<u64>, ResonatorError> {
    if !(1..=3).contains(&k) {
        return Err(ResonatorError::BadOrder(k));
    }
    if r_max > 6 {
        return Err(ResonatorError::BadSeriesOrder(r_max));
    }
    let mut out = Vec::with_capacity(r_max as usize + 1);
    for r in 0..=r_max {
        let mut c = 0u64;
        for w in 0..=r {
            let mut left: BTreeMap<(u64, u64), u64> = BTreeMap::new();
            for x in compositions(w, k as usize) {
                let entries: Vec<u64> = x.iter().map(|&e| p.pow(e)).collect();
                for (state, count) in chain_states(&entries, &[]) {
                    *left.entry(state).or_insert(0) += count;
                }
            }
            for y in compositions(r - w, k as usize) {
                let entries: Vec<u64> = y.iter().map(|&e| p.pow(e)).collect();
                for (state, count) in chain_states(&entries, &[]) {
                    c += count * left.get(&state).copied().unwrap_or(0);
                }
            }
        }
        out.push(c);
    }
    assert_eq!(out[0], 1, "the empty chain pair must be unique");
    Ok(out)
}

/// All ways to write `total` as an ordered sum of `parts` non-negative
/// integers.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
