//! Integer sets and the membership rules of the constructed example sets.

use serde::Serialize;

use crate::error::{Error, Result};

#[inline]
pub(crate) fn floor_log2(n: u64) -> u32 {
    debug_assert!(n > 0);
    63 - n.leading_zeros()
}

/// Sign pattern that is `+1` on the lower half `[2^k, 3·2^(k-1))` of every
/// dyadic block `[2^k, 2^(k+1))`, `k >= 1`, and `-1` everywhere else
/// (including `n = 1`).
pub fn counterexample_sign(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain {
            index: 0,
            limit: None,
        });
    }
    Ok(counterexample_value(n))
}

#[inline]
pub(crate) fn counterexample_value(n: u64) -> f64 {
    let k = floor_log2(n);
    // Only the dyadic block containing n can satisfy 2^k <= n < 3·2^(k-1).
    if k >= 1 && (n as u128) < 3u128 << (k - 1) {
        1.0
    } else {
        -1.0
    }
}

fn check_s(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::param("s", format!("{s} is outside [0, 1]")))
    }
}

/// Inclusive run of the A_s family contributed by dyadic level `m >= 1`:
/// `2^m + floor(s·2^(m-1)) + t` for `t = 1..=2^(m-1)`.
fn a_s_run(s: f64, m: u32) -> (u128, u128) {
    let half = 1u128 << (m - 1);
    let offset = (s * half as f64).floor() as u128;
    let start = (1u128 << m) + offset + 1;
    (start, start + half - 1)
}

/// Membership in `A_s = ∪_{m>=1} {2^m + floor(s·2^(m-1)) + t : t = 1..=2^(m-1)}`.
pub fn a_s_member(s: f64, n: u64) -> Result<bool> {
    check_s(s)?;
    if n == 0 {
        return Err(Error::Domain {
            index: 0,
            limit: None,
        });
    }
    Ok(a_s_contains(s, n))
}

pub(crate) fn a_s_contains(s: f64, n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let k = floor_log2(n);
    let n = n as u128;
    // With s = 1 the run of level m ends at 2^(m+1), one past its dyadic block,
    // so level k-1 has to be checked as well.
    [k, k.saturating_sub(1)]
        .into_iter()
        .filter(|&m| m >= 1)
        .any(|m| {
            let (lo, hi) = a_s_run(s, m);
            lo <= n && n <= hi
        })
}

/// Membership in `∪_{m>=1} {2^m + 1, ..., 2^m + m}`.
pub fn paper_example_member(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Domain {
            index: 0,
            limit: None,
        });
    }
    Ok(paper_example_contains(n))
}

#[inline]
pub(crate) fn paper_example_contains(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let m = floor_log2(n);
    let base = 1u64 << m;
    n > base && n - base <= m as u64
}

/// Sorted, pairwise disjoint list of inclusive integer intervals.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct RunList {
    runs: Vec<(u64, u64)>,
}

impl RunList {
    pub fn new(runs: Vec<(u64, u64)>) -> Result<Self> {
        let mut prev_end: Option<u64> = None;
        for &(lo, hi) in &runs {
            if lo == 0 {
                return Err(Error::param("runs", "runs must start at index 1 or later"));
            }
            if lo > hi {
                return Err(Error::param(
                    "runs",
                    format!("run [{lo}, {hi}] is reversed"),
                ));
            }
            if let Some(p) = prev_end {
                if lo <= p {
                    return Err(Error::param(
                        "runs",
                        format!("run [{lo}, {hi}] overlaps or precedes the previous run"),
                    ));
                }
            }
            prev_end = Some(hi);
        }
        Ok(Self { runs })
    }

    /// Builds the run list of an arbitrary collection of positive integers.
    pub fn from_members<I: IntoIterator<Item = u64>>(members: I) -> Result<Self> {
        let mut v: Vec<u64> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.first() == Some(&0) {
            return Err(Error::param("members", "0 is not a positive integer"));
        }
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for x in v {
            match runs.last_mut() {
                Some((_, hi)) if *hi + 1 == x => *hi = x,
                _ => runs.push((x, x)),
            }
        }
        Ok(Self { runs })
    }

    pub fn runs(&self) -> &[(u64, u64)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        let i = self.runs.partition_point(|&(_, hi)| hi < n);
        self.runs.get(i).is_some_and(|&(lo, _)| lo <= n)
    }

    /// `#(self ∩ [1, n])`.
    pub fn count_up_to(&self, n: u64) -> u64 {
        self.runs
            .iter()
            .take_while(|&&(lo, _)| lo <= n)
            .map(|&(lo, hi)| hi.min(n) - lo + 1)
            .sum()
    }
}

/// A set of positive integers, identified with its `{0,1}`-valued indicator
/// sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndicatorSet {
    Empty,
    All,
    /// `{n : n ≡ residue (mod modulus)}`.
    Residue {
        modulus: u64,
        residue: u64,
    },
    Runs(RunList),
    /// The A_s family, `0 <= s <= 1`.
    ASFamily {
        s: f64,
    },
    /// `∪_{m>=1} {2^m + 1, ..., 2^m + m}`.
    PaperExample,
}

impl IndicatorSet {
    pub fn residue(modulus: u64, residue: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::param("modulus", "must be positive"));
        }
        Ok(IndicatorSet::Residue {
            modulus,
            residue: residue % modulus,
        })
    }

    pub fn a_s(s: f64) -> Result<Self> {
        check_s(s)?;
        Ok(IndicatorSet::ASFamily { s })
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            IndicatorSet::Empty => false,
            IndicatorSet::All => n >= 1,
            IndicatorSet::Residue { modulus, residue } => n >= 1 && n % modulus == *residue,
            IndicatorSet::Runs(r) => r.contains(n),
            IndicatorSet::ASFamily { s } => a_s_contains(*s, n),
            IndicatorSet::PaperExample => paper_example_contains(n),
        }
    }

    /// Run-list representation of `self ∩ [1, limit]`, when the set has a
    /// natural one.
    pub fn runs_up_to(&self, limit: u64) -> Option<RunList> {
        let clip = |runs: Vec<(u128, u128)>| RunList {
            runs: runs
                .into_iter()
                .filter(|&(lo, _)| lo <= limit as u128)
                .map(|(lo, hi)| (lo as u64, hi.min(limit as u128) as u64))
                .collect(),
        };
        match self {
            IndicatorSet::Empty => Some(RunList::default()),
            IndicatorSet::All => Some(RunList {
                runs: if limit >= 1 { vec![(1, limit)] } else { vec![] },
            }),
            IndicatorSet::Runs(r) => Some(clip(
                r.runs
                    .iter()
                    .map(|&(a, b)| (a as u128, b as u128))
                    .collect(),
            )),
            IndicatorSet::ASFamily { s } => Some(clip((1..64).map(|m| a_s_run(*s, m)).collect())),
            IndicatorSet::PaperExample => Some(clip(
                (1..64u32)
                    .map(|m| {
                        let base = 1u128 << m;
                        (base + 1, base + m as u128)
                    })
                    .collect(),
            )),
            IndicatorSet::Residue { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            IndicatorSet::Empty => "empty".into(),
            IndicatorSet::All => "all".into(),
            IndicatorSet::Residue { modulus, residue } => {
                format!("residue(mod={modulus},r={residue})")
            }
            IndicatorSet::Runs(r) => format!("runs({})", r.runs.len()),
            IndicatorSet::ASFamily { s } => format!("a_s(s={s})"),
            IndicatorSet::PaperExample => "paper-example".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sign(n: u64) -> f64 {
        let hit = (1..64u32).any(|k| {
            let lo = 1u128 << k;
            let hi = 3u128 << (k - 1);
            lo <= n as u128 && (n as u128) < hi
        });
        if hit {
            1.0
        } else {
            -1.0
        }
    }

    #[test]
    fn counterexample_examples() {
        assert_eq!(counterexample_sign(1).unwrap(), -1.0);
        assert_eq!(counterexample_sign(2).unwrap(), 1.0);
        assert_eq!(counterexample_sign(5).unwrap(), 1.0);
        assert_eq!(counterexample_sign(6).unwrap(), -1.0);
        assert!(counterexample_sign(0).is_err());
    }

    #[test]
    fn counterexample_matches_brute_force() {
        for n in 1..5000 {
            assert_eq!(counterexample_value(n), brute_sign(n), "n = {n}");
        }
    }

    #[test]
    fn counterexample_blocks_split_evenly() {
        for k in 1..=20u32 {
            let (lo, hi) = (1u64 << k, 1u64 << (k + 1));
            let plus = (lo..hi).filter(|&n| counterexample_value(n) > 0.0).count();
            assert_eq!(plus as u64, 1 << (k - 1), "k = {k}");
        }
    }

    #[test]
    fn a_s_examples() {
        assert!(a_s_member(0.0, 3).unwrap());
        assert!(!a_s_member(0.0, 4).unwrap());
        assert!(a_s_member(1.0, (1 << 10) + (1 << 9) + 1).unwrap());
        assert!(matches!(a_s_member(1.5, 3), Err(Error::Parameter { .. })));
        assert!(matches!(a_s_member(-0.1, 3), Err(Error::Parameter { .. })));
    }

    #[test]
    fn a_s_dyadic_block_counts() {
        for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
            for m in 1..=18u32 {
                let (lo, hi) = (1u64 << m, 1u64 << (m + 1));
                let count = (lo..hi).filter(|&n| a_s_contains(s, n)).count() as u64;
                if s == 1.0 && m == 1 {
                    // The level-1 run of A_1 is {4}, so [2, 4) holds no member.
                    assert_eq!(count, 0);
                } else {
                    assert_eq!(count, 1 << (m - 1), "s = {s}, m = {m}");
                }
            }
        }
    }

    #[test]
    fn paper_example_examples() {
        assert!(paper_example_member(3).unwrap());
        assert!(!paper_example_member(8).unwrap());
        assert!(paper_example_member(10).unwrap());
        let below_64: Vec<u64> = (1..64).filter(|&n| paper_example_contains(n)).collect();
        assert_eq!(
            below_64,
            vec![3, 5, 6, 9, 10, 11, 17, 18, 19, 20, 33, 34, 35, 36, 37]
        );
    }

    #[test]
    fn run_list_validation() {
        assert!(RunList::new(vec![(1, 3), (5, 9)]).is_ok());
        assert!(RunList::new(vec![(1, 3), (3, 9)]).is_err());
        assert!(RunList::new(vec![(5, 9), (1, 3)]).is_err());
        assert!(RunList::new(vec![(4, 3)]).is_err());
        assert!(RunList::new(vec![(0, 3)]).is_err());
        let r = RunList::from_members([9, 2, 3, 4, 7, 3]).unwrap();
        assert_eq!(r.runs(), &[(2, 4), (7, 7), (9, 9)]);
        assert!(r.contains(3) && !r.contains(5) && r.contains(9) && !r.contains(10));
        assert_eq!(r.count_up_to(7), 4);
        assert_eq!(r.count_up_to(100), 5);
    }

    #[test]
    fn run_lists_agree_with_membership() {
        let sets = [
            IndicatorSet::Empty,
            IndicatorSet::All,
            IndicatorSet::a_s(0.0).unwrap(),
            IndicatorSet::a_s(0.375).unwrap(),
            IndicatorSet::a_s(1.0).unwrap(),
            IndicatorSet::PaperExample,
            IndicatorSet::Runs(RunList::new(vec![(2, 5), (40, 41)]).unwrap()),
        ];
        for set in &sets {
            let limit = 3000;
            let runs = set.runs_up_to(limit).unwrap();
            for n in 1..=limit {
                assert_eq!(
                    runs.contains(n),
                    set.contains(n),
                    "{} at {n}",
                    set.describe()
                );
            }
            assert_eq!(
                runs.count_up_to(limit),
                (1..=limit).filter(|&n| set.contains(n)).count() as u64
            );
        }
    }
}
