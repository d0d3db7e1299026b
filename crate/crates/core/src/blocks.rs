//! Geometric partition of the positive integers in base `alpha > 1`.
//!
//! Block `j >= 1` is `[alpha^(j-1), alpha^j) ∩ N`, which equals
//! `{n : ι_j <= n < ι_(j+1)}` with `ι_j = ceil(alpha^(j-1))`. Blocks may be
//! empty when `alpha` is close to 1; their weight `w_j = ι_(j+1) - ι_j` is then
//! zero.
//!
//! Powers are formed by repeated multiplication. A power within relative
//! `1e-12` of an integer is snapped to it before the ceiling is taken, and the
//! boundaries are forced to be nondecreasing, so the partition stays
//! well-formed under floating-point drift.

use std::sync::RwLock;

use serde::Serialize;

use crate::error::{Error, Result};

/// Bases must exceed `1 + ALPHA_MIN_GAP`.
pub const ALPHA_MIN_GAP: f64 = 1e-12;
const SNAP_RELATIVE: f64 = 1e-12;
/// Largest admissible boundary.
pub const INDEX_LIMIT: u64 = i64::MAX as u64;

pub fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 1.0 + ALPHA_MIN_GAP {
        Ok(())
    } else {
        Err(Error::param(
            "alpha",
            format!("{alpha} must be a finite real greater than 1"),
        ))
    }
}

#[inline]
fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= SNAP_RELATIVE * v.abs() {
        r
    } else {
        v
    }
}

/// One boundary `ι_j` together with the (snapped) power `alpha^(j-1)` it was
/// derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundary {
    pub j: u64,
    pub iota: u64,
    pub power: f64,
}

/// Streams `ι_1, ι_2, ...` until the next boundary would leave the 64-bit
/// signed range.
#[derive(Debug, Clone)]
pub struct Boundaries {
    alpha: f64,
    power: f64,
    prev: u64,
    j: u64,
    done: bool,
}

impl Boundaries {
    pub fn new(alpha: f64) -> Result<Self> {
        validate_alpha(alpha)?;
        Ok(Self {
            alpha,
            power: 1.0,
            prev: 1,
            j: 1,
            done: false,
        })
    }
}

impl Iterator for Boundaries {
    type Item = Boundary;

    fn next(&mut self) -> Option<Boundary> {
        if self.done {
            return None;
        }
        let power = snap(self.power);
        let ceil = power.ceil();
        // 2^63 is the first f64 that no longer fits an i64.
        if ceil >= (1u64 << 63) as f64 {
            self.done = true;
            return None;
        }
        let iota = (ceil as u64).max(self.prev);
        let out = Boundary {
            j: self.j,
            iota,
            power,
        };
        self.prev = iota;
        self.j += 1;
        self.power *= self.alpha;
        Some(out)
    }
}

/// Block `j` of a partition: the integers in `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    pub j: u64,
    pub lo: u64,
    pub hi: u64,
}

impl Block {
    pub fn weight(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, n: u64) -> bool {
        self.lo <= n && n < self.hi
    }
}

#[derive(Debug)]
struct Cache {
    bounds: Vec<u64>,
    powers: Vec<f64>,
    cursor: Boundaries,
    exhausted: bool,
}

impl Cache {
    fn push_next(&mut self) -> bool {
        match self.cursor.next() {
            Some(b) => {
                self.bounds.push(b.iota);
                self.powers.push(b.power);
                true
            }
            None => {
                self.exhausted = true;
                false
            }
        }
    }
}

/// Geometric partition with a lazily extended boundary cache. The cache is
/// guarded internally, so a partition can be shared across threads.
#[derive(Debug)]
pub struct GeometricPartition {
    alpha: f64,
    cache: RwLock<Cache>,
}

impl Clone for GeometricPartition {
    fn clone(&self) -> Self {
        let c = self.cache.read().unwrap();
        Self {
            alpha: self.alpha,
            cache: RwLock::new(Cache {
                bounds: c.bounds.clone(),
                powers: c.powers.clone(),
                cursor: c.cursor.clone(),
                exhausted: c.exhausted,
            }),
        }
    }
}

impl GeometricPartition {
    pub fn new(alpha: f64) -> Result<Self> {
        Ok(Self {
            alpha,
            cache: RwLock::new(Cache {
                bounds: Vec::new(),
                powers: Vec::new(),
                cursor: Boundaries::new(alpha)?,
                exhausted: false,
            }),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Makes `ι_1..=ι_count` available.
    fn ensure_bounds(&self, count: u64) -> Result<()> {
        if self.cache.read().unwrap().bounds.len() as u64 >= count {
            return Ok(());
        }
        let mut c = self.cache.write().unwrap();
        while (c.bounds.len() as u64) < count {
            if !c.push_next() {
                return Err(Error::Range {
                    what: format!("boundary ι_{count} for alpha = {}", self.alpha),
                });
            }
        }
        Ok(())
    }

    fn check_j(j: u64) -> Result<()> {
        if j == 0 {
            Err(Error::param("j", "block indices start at 1"))
        } else {
            Ok(())
        }
    }

    /// `ι_j = ceil(alpha^(j-1))`.
    pub fn iota(&self, j: u64) -> Result<u64> {
        Self::check_j(j)?;
        self.ensure_bounds(j)?;
        Ok(self.cache.read().unwrap().bounds[(j - 1) as usize])
    }

    /// The snapped power `alpha^(j-1)`.
    pub fn power(&self, j: u64) -> Result<f64> {
        Self::check_j(j)?;
        self.ensure_bounds(j)?;
        Ok(self.cache.read().unwrap().powers[(j - 1) as usize])
    }

    /// Real length `alpha^j - alpha^(j-1)` of block `j`.
    pub fn real_length(&self, j: u64) -> Result<f64> {
        Ok(self.power(j + 1)? - self.power(j)?)
    }

    pub fn block(&self, j: u64) -> Result<Block> {
        Self::check_j(j)?;
        self.ensure_bounds(j + 1)?;
        let c = self.cache.read().unwrap();
        Ok(Block {
            j,
            lo: c.bounds[(j - 1) as usize],
            hi: c.bounds[j as usize],
        })
    }

    pub fn weight(&self, j: u64) -> Result<u64> {
        Ok(self.block(j)?.weight())
    }

    /// The unique (nonempty) block containing `n`.
    pub fn block_index_of(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::Domain {
                index: 0,
                limit: None,
            });
        }
        loop {
            {
                let c = self.cache.read().unwrap();
                if c.bounds.last().is_some_and(|&b| b > n) {
                    // ι_1 = 1 <= n, so at least one boundary is <= n.
                    return Ok(c.bounds.partition_point(|&b| b <= n) as u64);
                }
                if c.exhausted {
                    return Err(Error::Range {
                        what: format!("index {n} for alpha = {}", self.alpha),
                    });
                }
            }
            let mut c = self.cache.write().unwrap();
            let target = (c.bounds.len() * 2).max(64);
            while c.bounds.len() < target && c.push_next() {}
        }
    }

    /// Largest `j` whose block end `ι_(j+1)` is representable.
    pub fn horizon(&self) -> u64 {
        let mut c = self.cache.write().unwrap();
        while c.push_next() {}
        c.bounds.len() as u64 - 1
    }

    /// Blocks `1..=count`.
    pub fn blocks(&self, count: u64) -> Result<Vec<Block>> {
        self.ensure_bounds(count + 1)?;
        let c = self.cache.read().unwrap();
        Ok(c.bounds
            .windows(2)
            .take(count as usize)
            .zip(1..)
            .map(|(w, j)| Block {
                j,
                lo: w[0],
                hi: w[1],
            })
            .collect())
    }
}

pub fn iota(alpha: f64, j: u64) -> Result<u64> {
    GeometricPartition::new(alpha)?.iota(j)
}

/// `(lo, hi)` with block `j` equal to `[lo, hi) ∩ N`.
pub fn block_bounds(alpha: f64, j: u64) -> Result<(u64, u64)> {
    let b = GeometricPartition::new(alpha)?.block(j)?;
    Ok((b.lo, b.hi))
}

pub fn weight(alpha: f64, j: u64) -> Result<u64> {
    GeometricPartition::new(alpha)?.weight(j)
}

pub fn block_index_of(alpha: f64, n: u64) -> Result<u64> {
    GeometricPartition::new(alpha)?.block_index_of(n)
}
