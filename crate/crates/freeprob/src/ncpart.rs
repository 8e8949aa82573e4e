//! Set partitions, non-crossing partitions, pair partitions, and the nesting
//! forest that drives nested cumulant evaluation.
//!
//! Ground sets are `{1..n}` and blocks are kept in canonical form: each block
//! sorted ascending, blocks ordered by minimum element. Enumeration is direct
//! recursive generation; the filter path (all set partitions restricted by the
//! crossing test) is exercised by tests as an independent oracle.

use crate::error::{Error, Result};
use std::fmt;

/// Largest ground set for full set-partition enumeration (Bell growth).
pub const MAX_SET_PARTITION_N: usize = 12;
/// Largest ground set for non-crossing enumeration (Catalan growth).
pub const MAX_NC_N: usize = 12;
/// Largest ground set for pair-partition enumeration (double-factorial growth).
pub const MAX_PAIRING_N: usize = 14;

/// Partition of `{1..n}` into disjoint nonempty blocks, canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates and canonicalizes: every block nonempty, blocks disjoint,
    /// union exactly `{1..n}`.
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition {
                n,
                reason: "empty ground set".into(),
            });
        }
        let mut seen = vec![false; n + 1];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition {
                    n,
                    reason: "empty block".into(),
                });
            }
            block.sort_unstable();
            for &e in block.iter() {
                if e == 0 || e > n {
                    return Err(Error::InvalidPartition {
                        n,
                        reason: format!("element {e} outside 1..{n}"),
                    });
                }
                if seen[e] {
                    return Err(Error::InvalidPartition {
                        n,
                        reason: format!("element {e} repeated"),
                    });
                }
                seen[e] = true;
            }
        }
        if let Some(missing) = (1..=n).find(|&e| !seen[e]) {
            return Err(Error::InvalidPartition {
                n,
                reason: format!("element {missing} uncovered"),
            });
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    /// Construction from enumeration code that produces canonical blocks.
    fn from_canonical(n: usize, blocks: Vec<Vec<usize>>) -> Self {
        debug_assert!(SetPartition::new(n, blocks.clone()).is_ok_and(|p| p.blocks == blocks));
        SetPartition { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_pair_partition(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// Index of the block containing `elem` (1-based element).
    pub fn block_of(&self, elem: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&elem).is_ok())
            .expect("element within ground set")
    }
}

fn fmt_blocks(blocks: &[Vec<usize>], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{{")?;
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "(")?;
        for (j, e) in block.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")?;
    }
    write!(f, "}}")
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_blocks(&self.blocks, f)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_blocks(&self.blocks, f)
    }
}

/// Non-crossing partition together with its nesting forest. Block `β` is a
/// child of `α` when `β` lies strictly between two consecutive elements of
/// `α` and `α` is the innermost such block.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPartition {
    base: SetPartition,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
}

impl NcPartition {
    pub fn from_set_partition(base: SetPartition) -> Result<Self> {
        if !is_noncrossing(&base) {
            return Err(Error::CrossingPartition);
        }
        Ok(Self::from_noncrossing(base))
    }

    /// `base` must already pass the crossing test.
    fn from_noncrossing(base: SetPartition) -> Self {
        let parent = nesting_parents(&base);
        let m = base.blocks.len();
        let mut children = vec![Vec::new(); m];
        let mut roots = Vec::new();
        // Block order is by minimum, so child lists come out left to right.
        for (i, &p) in parent.iter().enumerate() {
            match p {
                Some(q) => children[q].push(i),
                None => roots.push(i),
            }
        }
        NcPartition {
            base,
            parent,
            children,
            roots,
        }
    }

    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn base(&self) -> &SetPartition {
        &self.base
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.base.blocks
    }

    pub fn block_count(&self) -> usize {
        self.base.blocks.len()
    }

    pub fn parent(&self, block: usize) -> Option<usize> {
        self.parent[block]
    }

    /// Child blocks of `block` in left-to-right hull order.
    pub fn children(&self, block: usize) -> &[usize] {
        &self.children[block]
    }

    /// Root blocks in left-to-right hull order.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn is_pair_partition(&self) -> bool {
        self.base.is_pair_partition()
    }

    /// Blocks as index pairs; only meaningful for pair partitions.
    pub fn as_pairs(&self) -> Vec<(usize, usize)> {
        debug_assert!(self.is_pair_partition());
        self.blocks().iter().map(|b| (b[0], b[1])).collect()
    }
}

impl fmt::Debug for NcPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)
    }
}

impl fmt::Display for NcPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)
    }
}

/// Parent of each block: the innermost block whose hull strictly contains the
/// block's hull. Valid only for non-crossing input, where containing hulls
/// are totally ordered by inclusion.
fn nesting_parents(p: &SetPartition) -> Vec<Option<usize>> {
    let hulls: Vec<(usize, usize)> = p
        .blocks
        .iter()
        .map(|b| (b[0], *b.last().expect("nonempty block")))
        .collect();
    hulls
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| {
            hulls
                .iter()
                .enumerate()
                .filter(|&(j, &(jlo, jhi))| j != i && jlo < lo && hi < jhi)
                .min_by_key(|&(_, &(jlo, jhi))| jhi - jlo)
                .map(|(j, _)| j)
        })
        .collect()
}

/// Crossing test: false iff some `a<b<c<d` has `a,c` in one block and `b,d`
/// in another. Scans left to right keeping a stack of open blocks; resuming a
/// block that is not on top witnesses a crossing.
pub fn is_noncrossing(p: &SetPartition) -> bool {
    let n = p.n;
    let mut block_at = vec![usize::MAX; n + 1];
    let mut last_of = vec![0usize; p.blocks.len()];
    for (i, block) in p.blocks.iter().enumerate() {
        for &e in block {
            block_at[e] = i;
        }
        last_of[i] = *block.last().expect("nonempty block");
    }
    let mut stack: Vec<usize> = Vec::new();
    let mut opened = vec![false; p.blocks.len()];
    for (&b, e) in block_at[1..].iter().zip(1..) {
        if !opened[b] {
            opened[b] = true;
            stack.push(b);
        } else if *stack.last().expect("open block on stack") != b {
            return false;
        }
        if last_of[b] == e {
            stack.pop();
        }
    }
    true
}

/// All partitions of `{1..n}` via restricted growth strings.
pub fn enumerate_set_partitions(n: usize) -> Result<Vec<SetPartition>> {
    guard_size("set partitions", n, MAX_SET_PARTITION_N)?;
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    extend_rgs(n, 1, &mut blocks, &mut out);
    Ok(out)
}

fn extend_rgs(n: usize, next: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<SetPartition>) {
    if next > n {
        out.push(SetPartition::from_canonical(n, blocks.clone()));
        return;
    }
    for i in 0..blocks.len() {
        blocks[i].push(next);
        extend_rgs(n, next + 1, blocks, out);
        blocks[i].pop();
    }
    blocks.push(vec![next]);
    extend_rgs(n, next + 1, blocks, out);
    blocks.pop();
}

/// All non-crossing partitions of `{1..n}`, each with its nesting forest.
/// Direct generation: the block of the smallest element splits the rest into
/// independent contiguous segments.
pub fn enumerate_nc(n: usize) -> Result<Vec<NcPartition>> {
    guard_size("non-crossing partitions", n, MAX_NC_N)?;
    let raw = nc_blocks_of_range(1, n);
    Ok(raw
        .into_iter()
        .map(|blocks| NcPartition::from_noncrossing(SetPartition::from_canonical(n, blocks)))
        .collect())
}

/// Non-crossing partitions of the interval `lo..=hi` as canonical block lists.
fn nc_blocks_of_range(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    // The first block is {lo} plus any subset of lo+1..=hi, chosen here as a
    // sorted list; the gaps between its consecutive members and the tail after
    // its maximum are partitioned independently.
    let mut members = vec![lo];
    choose_first_block(lo, hi, &mut members, &mut out);
    out
}

fn choose_first_block(
    from: usize,
    hi: usize,
    members: &mut Vec<usize>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    // Close the block here: fill every gap and the tail.
    let segments: Vec<(usize, usize)> = members
        .windows(2)
        .map(|w| (w[0] + 1, w[1] - 1))
        .chain(std::iter::once((members.last().unwrap() + 1, hi)))
        .collect();
    let mut partials: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for &(slo, shi) in &segments {
        let sub = nc_blocks_of_range(slo, shi);
        let mut next = Vec::with_capacity(partials.len() * sub.len());
        for base in &partials {
            for extra in &sub {
                let mut combined = base.clone();
                combined.extend(extra.iter().cloned());
                next.push(combined);
            }
        }
        partials = next;
    }
    for partial in partials {
        let mut blocks = vec![members.clone()];
        blocks.extend(partial);
        blocks.sort_by_key(|b| b[0]);
        out.push(blocks);
    }
    // Or grow it by any later element.
    for e in (from + 1)..=hi {
        members.push(e);
        choose_first_block(e, hi, members, out);
        members.pop();
    }
}

/// All non-crossing pair partitions of `{1..n}`; empty for odd `n`.
pub fn enumerate_ncpp(n: usize) -> Result<Vec<NcPartition>> {
    guard_size("non-crossing pair partitions", n, MAX_PAIRING_N)?;
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    let raw = ncpp_of_range(1, n);
    Ok(raw
        .into_iter()
        .map(|blocks| NcPartition::from_noncrossing(SetPartition::from_canonical(n, blocks)))
        .collect())
}

fn ncpp_of_range(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    // lo pairs with some v leaving even-sized inside and tail segments.
    for v in ((lo + 1)..=hi).step_by(2) {
        let inside = ncpp_of_range(lo + 1, v - 1);
        let tail = ncpp_of_range(v + 1, hi);
        for ins in &inside {
            for tl in &tail {
                let mut blocks = vec![vec![lo, v]];
                blocks.extend(ins.iter().cloned());
                blocks.extend(tl.iter().cloned());
                blocks.sort_by_key(|b| b[0]);
                out.push(blocks);
            }
        }
    }
    out
}

/// All pair partitions of `{1..n}` (crossings allowed); empty for odd `n`.
pub fn enumerate_pairings(n: usize) -> Result<Vec<SetPartition>> {
    guard_size("pair partitions", n, MAX_PAIRING_N)?;
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let unpaired: Vec<usize> = (1..=n).collect();
    let mut acc = Vec::new();
    pairings_rec(&unpaired, &mut acc, n, &mut out);
    Ok(out)
}

fn pairings_rec(
    unpaired: &[usize],
    acc: &mut Vec<Vec<usize>>,
    n: usize,
    out: &mut Vec<SetPartition>,
) {
    if unpaired.is_empty() {
        out.push(SetPartition::from_canonical(n, acc.clone()));
        return;
    }
    let first = unpaired[0];
    for i in 1..unpaired.len() {
        let mate = unpaired[i];
        let mut rest: Vec<usize> = unpaired[1..].to_vec();
        rest.remove(i - 1);
        acc.push(vec![first, mate]);
        pairings_rec(&rest, acc, n, out);
        acc.pop();
    }
}

fn guard_size(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n == 0 || n > limit {
        return Err(Error::SizeLimit {
            what,
            requested: n,
            limit,
        });
    }
    Ok(())
}

/// Bell numbers by the Bell triangle recurrence.
pub fn bell_number(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

/// Catalan numbers by the convolution recurrence.
pub fn catalan_number(n: usize) -> u64 {
    let mut c = vec![1u64];
    for m in 1..=n {
        let val = (0..m).map(|i| c[i] * c[m - 1 - i]).sum();
        c.push(val);
    }
    c[n]
}

/// Number of pair partitions of an `n`-set: `(n-1)!!` for even `n`, else 0.
pub fn pairing_count(n: usize) -> u64 {
    if n % 2 == 1 {
        return 0;
    }
    let mut p = 1u64;
    let mut m = n;
    while m >= 2 {
        p *= (m - 1) as u64;
        m -= 2;
    }
    p
}
