//! Exhaustive enumeration, used as ground truth for the optimizers.

use thiserror::Error;

use crate::delay::DelayProfile;
use crate::library::Taps;
use crate::par::Execution;
use crate::units::MeanFs;

use super::{candidate_arrivals, PairSet, PrunedCandidates, TapAssignment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search guard hit: {required} configurations exceed the oracle limit of {limit}")]
    LimitExceeded { required: String, limit: u64 },
    #[error("pair set covers {pairs} nodes, profile has {profile}")]
    Shape { pairs: usize, profile: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub assignment: TapAssignment,
    pub cost: MeanFs,
    pub configurations: u64,
}

/// Optimum of the mean absolute difference over `pairs` across all `M^(N-1)`
/// assignments with the furthest node on tap 1. Refuses when the space is
/// larger than `limit`.
pub fn brute_force_oracle(
    profile: &DelayProfile,
    taps: &Taps,
    pairs: &PairSet,
    limit: u64,
    exec: Execution,
) -> Result<OracleResult, OracleError> {
    let n = profile.len();
    let m = taps.len() as u32;
    let lists: Vec<Vec<u32>> = (0..n)
        .map(|k| if k + 1 == n { vec![1] } else { (1..=m).collect() })
        .collect();
    let required = (0..n.saturating_sub(1)).try_fold(1u64, |acc, _| acc.checked_mul(u64::from(m)));
    match required {
        Some(r) if r <= limit => {}
        _ => {
            return Err(OracleError::LimitExceeded {
                required: match required {
                    Some(r) => r.to_string(),
                    None => format!("{m}^{}", n - 1),
                },
                limit,
            })
        }
    }
    enumerate(profile, taps, &lists, pairs, exec)
}

/// Optimum over the pruned candidate space.
pub fn brute_force_pruned(
    profile: &DelayProfile,
    taps: &Taps,
    candidates: &PrunedCandidates,
    pairs: &PairSet,
    exec: Execution,
) -> Result<OracleResult, OracleError> {
    enumerate(profile, taps, &candidates.tap_lists(), pairs, exec)
}

fn enumerate(
    profile: &DelayProfile,
    taps: &Taps,
    lists: &[Vec<u32>],
    pairs: &PairSet,
    exec: Execution,
) -> Result<OracleResult, OracleError> {
    let n = profile.len();
    if pairs.nodes() != n {
        return Err(OracleError::Shape {
            pairs: pairs.nodes(),
            profile: n,
        });
    }
    let arrivals = candidate_arrivals(profile, taps, lists);
    let radix: Vec<u64> = lists.iter().map(|l| l.len() as u64).collect();
    let total: u64 = radix.iter().product();
    let chunks = (exec.workers() as u64 * 8).clamp(1, total.max(1));
    let per_chunk = total.div_ceil(chunks);

    // Index digits are most significant at node 1, so index order is
    // lexicographic order and the smallest index wins ties.
    let best = exec
        .map_range(chunks as usize, |chunk| {
            let start = chunk as u64 * per_chunk;
            let end = (start + per_chunk).min(total);
            if start >= end {
                return None;
            }
            let mut digits = vec![0usize; n];
            let mut rest = start;
            for k in (0..n).rev() {
                digits[k] = (rest % radix[k]) as usize;
                rest /= radix[k];
            }
            let mut values = vec![0i64; n];
            let mut best: Option<(i64, u64)> = None;
            for index in start..end {
                for k in 0..n {
                    values[k] = arrivals[k][digits[k]];
                }
                let sum: i64 = pairs
                    .pairs()
                    .iter()
                    .map(|&(x, y)| (values[x as usize] - values[y as usize]).abs())
                    .sum();
                if best.map_or(true, |b| (sum, index) < b) {
                    best = Some((sum, index));
                }
                for k in (0..n).rev() {
                    digits[k] += 1;
                    if (digits[k] as u64) < radix[k] {
                        break;
                    }
                    digits[k] = 0;
                }
            }
            best
        })
        .into_iter()
        .flatten()
        .min()
        .unwrap_or((0, 0));

    let (sum, mut index) = best;
    let mut indices = vec![0u32; n];
    for k in (0..n).rev() {
        indices[k] = lists[k][(index % radix[k]) as usize];
        index /= radix[k];
    }
    Ok(OracleResult {
        assignment: TapAssignment::new_unpinned(indices),
        cost: MeanFs::new(2 * sum, 2 * pairs.len() as u64),
        configurations: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::CornerId;
    use crate::skew::tests::chain_profile;
    use crate::units::TimeFs;

    #[test]
    fn chain_full_space() {
        let (p, taps) = chain_profile();
        let r = brute_force_oracle(&p, &taps, &PairSet::star(3), 36, Execution::Parallel).unwrap();
        assert_eq!(r.assignment.indices(), &[6, 3, 1]);
        assert_eq!(r.cost, MeanFs::new(50_000, 1));
        assert_eq!(r.configurations, 36);
        let seq = brute_force_oracle(&p, &taps, &PairSet::star(3), 36, Execution::Sequential).unwrap();
        assert_eq!(seq, r);
    }

    #[test]
    fn single_node() {
        let p = DelayProfile::new(CornerId::new("BC"), vec![TimeFs::ZERO]);
        let (_, taps) = chain_profile();
        let r = brute_force_oracle(&p, &taps, &PairSet::all(1), 1, Execution::Parallel).unwrap();
        assert_eq!(r.assignment.indices(), &[1]);
        assert!(r.cost.is_zero());
    }

    #[test]
    fn guard_refuses() {
        let p = DelayProfile::new(CornerId::new("BC"), vec![TimeFs::ZERO; 6]);
        let taps = Taps::new((1..=8).map(TimeFs::from_ns).collect()).unwrap();
        assert!(matches!(
            brute_force_oracle(&p, &taps, &PairSet::all(6), 10, Execution::Parallel),
            Err(OracleError::LimitExceeded { limit: 10, .. })
        ));
        let many = DelayProfile::new(CornerId::new("BC"), vec![TimeFs::ZERO; 40]);
        let err = brute_force_oracle(&many, &taps, &PairSet::all(40), u64::MAX, Execution::Parallel).unwrap_err();
        assert_eq!(err.to_string(), "search guard hit: 8^39 configurations exceed the oracle limit of 18446744073709551615");
    }
}
