//! Lexicographic subset reverse search over an orbit pool.
//!
//! A node is an increasing sequence of orbit representatives whose orbits are
//! pairwise admissible. Children append a representative that is larger than
//! the last one and admissible with everything chosen so far. A node is
//! emitted once its orbits cover the whole region.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::mpsc;

use super::pool::{last_common, OrbitPool};
use super::Pruning;
use crate::error::EnumerationError;

#[derive(Clone, Copy, Debug)]
pub(crate) struct SearchOptions {
    pub pruning: Pruning,
    pub canonical_check: bool,
    pub max_nodes: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Tally {
    pub classes: u64,
    pub raw: u64,
    pub nodes: u64,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.classes += other.classes;
        self.raw += other.raw;
        self.nodes += other.nodes;
    }
}

struct Aborted;

/// Node budget shared by all workers.
struct Budget<'a> {
    limit: Option<u64>,
    used: &'a AtomicU64,
    stop: &'a AtomicBool,
    local: u64,
}

impl Budget<'_> {
    const FLUSH: u64 = 4096;

    #[inline]
    fn tick(&mut self) -> Result<(), Aborted> {
        self.local += 1;
        if self.local == Self::FLUSH {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<(), Aborted> {
        let total = self.used.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if self.stop.load(Ordering::Relaxed) {
            return Err(Aborted);
        }
        match self.limit {
            Some(limit) if total > limit => {
                self.stop.store(true, Ordering::Relaxed);
                Err(Aborted)
            }
            _ => Ok(()),
        }
    }
}

enum Sink<'s> {
    Count,
    Visit(&'s mut dyn FnMut(&[u32])),
    Collect {
        depth: usize,
        prefixes: &'s mut Vec<Vec<u32>>,
        completed: &'s mut Vec<Vec<u32>>,
    },
}

struct Searcher<'p, 's, 'b> {
    pool: &'p OrbitPool,
    opts: SearchOptions,
    edge_count: Vec<u8>,
    point_count: Vec<u16>,
    chosen: Vec<u32>,
    covered: u64,
    /// Candidate bitsets, one level per depth.
    levels: Vec<u64>,
    scratch: Vec<u32>,
    tally: Tally,
    budget: Budget<'b>,
    sink: Sink<'s>,
}

impl<'p, 's, 'b> Searcher<'p, 's, 'b> {
    fn new(pool: &'p OrbitPool, opts: SearchOptions, budget: Budget<'b>, sink: Sink<'s>) -> Self {
        // Every push covers positive area, so depth never exceeds the area.
        let max_depth = pool.total_area as usize + 2;
        let mut levels = vec![0; max_depth * pool.words];
        levels[..pool.words].copy_from_slice(&pool.all_bits());
        Self {
            pool,
            opts,
            edge_count: vec![0; pool.edges.len()],
            point_count: vec![0; pool.config.len()],
            chosen: Vec::new(),
            covered: 0,
            levels,
            scratch: Vec::new(),
            tally: Tally::default(),
            budget,
            sink,
        }
    }

    fn candidates(&self, depth: usize) -> &[u64] {
        let w = self.pool.words;
        &self.levels[depth * w..(depth + 1) * w]
    }

    /// Appends representative `c` at `depth` and derives the next level.
    fn push(&mut self, depth: usize, c: usize) {
        let pool = self.pool;
        let w = pool.words;
        for &e in &pool.orbit_edges[c] {
            self.edge_count[e as usize] += 1;
        }
        for &p in &pool.orbit_points[c] {
            self.point_count[p as usize] += 1;
        }
        self.covered += pool.orbit_area[c];
        self.chosen.push(c as u32);

        let (cur, next) = self.levels.split_at_mut((depth + 1) * w);
        let cur = &cur[depth * w..];
        let next = &mut next[..w];
        let compat = pool.compat.row(c);
        let first_word = (c + 1) / 64;
        for i in 0..w {
            next[i] = if i < first_word { 0 } else { cur[i] & compat[i] };
        }
        let shift = (c + 1) % 64;
        if first_word < w {
            next[first_word] &= u64::MAX << shift;
        }
    }

    fn pop(&mut self) {
        let pool = self.pool;
        let c = self.chosen.pop().expect("pop on empty state") as usize;
        for &e in &pool.orbit_edges[c] {
            self.edge_count[e as usize] -= 1;
        }
        for &p in &pool.orbit_points[c] {
            self.point_count[p as usize] -= 1;
        }
        self.covered -= pool.orbit_area[c];
    }

    fn is_canonical(&mut self) -> bool {
        for perm in &self.pool.rep_perms {
            self.scratch.clear();
            self.scratch
                .extend(self.chosen.iter().map(|&r| perm[r as usize]));
            self.scratch.sort_unstable();
            if self.scratch.as_slice() < self.chosen.as_slice() {
                return false;
            }
        }
        true
    }

    /// Lex-minimal interior edge covered exactly once.
    fn min_uncovered_edge(&self) -> Option<u32> {
        let pool = self.pool;
        self.chosen
            .iter()
            .flat_map(|&r| pool.orbit_edges[r as usize].iter().copied())
            .filter(|&e| self.edge_count[e as usize] == 1 && pool.edge_interior[e as usize])
            .min()
    }

    /// The pruning rule taken literally: give up when the lex-minimal
    /// uncovered interior edge is smaller than every facet of every
    /// remaining admissible orbit.
    fn verbatim_prune(&self, depth: usize) -> bool {
        let Some(open) = self.min_uncovered_edge() else {
            return false;
        };
        let pool = self.pool;
        let cand = self.candidates(depth);
        let mut best = u32::MAX;
        for (w, &word) in cand.iter().enumerate() {
            let mut m = word;
            while m != 0 {
                let r = w * 64 + m.trailing_zeros() as usize;
                best = best.min(pool.min_edge[r]);
                m &= m - 1;
            }
        }
        open < best
    }

    /// Largest representative a child may use, or `None` when some open
    /// edge or required point can no longer be covered. Later choices are
    /// larger than the child, so the child must not pass the last candidate
    /// covering any open edge.
    fn child_bound(&self, depth: usize) -> Option<usize> {
        let pool = self.pool;
        let cand = self.candidates(depth);
        let mut bound = usize::MAX;
        for &r in &self.chosen {
            for &e in &pool.orbit_edges[r as usize] {
                let e = e as usize;
                if self.edge_count[e] == 1 && pool.edge_interior[e] {
                    bound = bound.min(last_common(cand, pool.edge_cover.row(e))?);
                }
            }
        }
        if let Some(p) = (0..pool.config.len())
            .find(|&p| self.point_count[p] == 0 && pool.required_point[p])
        {
            bound = bound.min(last_common(cand, pool.point_cover.row(p))?);
        }
        Some(bound)
    }

    fn descend(&mut self, depth: usize) -> Result<(), Aborted> {
        self.budget.tick()?;
        self.tally.nodes += 1;

        if self.covered == self.pool.total_area {
            self.emit();
            return Ok(());
        }
        if self.opts.canonical_check && !self.is_canonical() {
            return Ok(());
        }
        let bound = match self.opts.pruning {
            Pruning::Off => usize::MAX,
            Pruning::Verbatim => {
                if self.verbatim_prune(depth) {
                    return Ok(());
                }
                usize::MAX
            }
            Pruning::Full => {
                if self.verbatim_prune(depth) {
                    return Ok(());
                }
                match self.child_bound(depth) {
                    Some(b) => b,
                    None => return Ok(()),
                }
            }
        };
        if let Sink::Collect { depth: at, prefixes, .. } = &mut self.sink {
            if depth == *at {
                prefixes.push(self.chosen.clone());
                return Ok(());
            }
        }

        let w = self.pool.words;
        for word_idx in 0..w {
            // Children only write deeper levels, so this word stays valid.
            let mut m = self.levels[depth * w + word_idx];
            while m != 0 {
                let c = word_idx * 64 + m.trailing_zeros() as usize;
                if c > bound {
                    return Ok(());
                }
                m &= m - 1;
                self.push(depth, c);
                let r = self.descend(depth + 1);
                self.pop();
                r?;
            }
        }
        Ok(())
    }

    fn emit(&mut self) {
        if self.opts.canonical_check && !self.is_canonical() {
            return;
        }
        match &mut self.sink {
            Sink::Count => {}
            Sink::Visit(f) => f(&self.chosen),
            // Finished above the split depth, so no worker will see it.
            Sink::Collect { completed, .. } => completed.push(self.chosen.clone()),
        }
        self.tally.classes += 1;
        self.tally.raw += if self.opts.canonical_check {
            self.pool.orbit_size(&self.chosen)
        } else {
            1
        };
    }
}

const SPLIT_DEPTH: usize = 2;

/// Runs the search on `workers` threads. With more than one worker the tree
/// is cut at a fixed depth and the subtrees are handed out dynamically;
/// the visitor then sees triangulations in no particular order.
pub(crate) fn run(
    pool: &OrbitPool,
    opts: SearchOptions,
    workers: usize,
    mut visitor: Option<&mut dyn FnMut(&[u32])>,
) -> Result<Tally, EnumerationError> {
    let used = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let budget = || Budget {
        limit: opts.max_nodes,
        used: &used,
        stop: &stop,
        local: 0,
    };
    let aborted = || EnumerationError::NodeLimit {
        nodes: used.load(Ordering::Relaxed),
        limit: opts.max_nodes.unwrap_or(u64::MAX),
    };

    if workers <= 1 {
        let sink = match visitor {
            Some(v) => Sink::Visit(v),
            None => Sink::Count,
        };
        let mut searcher = Searcher::new(pool, opts, budget(), sink);
        let outcome = searcher.descend(0).and_then(|_| searcher.budget.flush());
        return outcome.map(|_| searcher.tally).map_err(|_| aborted());
    }

    let mut prefixes = Vec::new();
    let mut completed = Vec::new();
    let mut tally = {
        let mut head = Searcher::new(
            pool,
            opts,
            budget(),
            Sink::Collect {
                depth: SPLIT_DEPTH,
                prefixes: &mut prefixes,
                completed: &mut completed,
            },
        );
        head.descend(0)
            .and_then(|_| head.budget.flush())
            .map_err(|_| aborted())?;
        head.tally
    };
    if let Some(v) = visitor.as_mut() {
        for chosen in &completed {
            v(chosen);
        }
    }

    let next = AtomicUsize::new(0);
    let streaming = visitor.is_some();
    let (tx, rx) = mpsc::sync_channel::<Vec<u32>>(1024);
    let results: Vec<Result<Tally, Aborted>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                let tx = tx.clone();
                let (next, prefixes) = (&next, &prefixes);
                let budget = budget();
                scope.spawn(move || {
                    let mut send = |chosen: &[u32]| {
                        // A closed receiver only happens after an abort.
                        let _ = tx.send(chosen.to_vec());
                    };
                    let sink = if streaming {
                        Sink::Visit(&mut send)
                    } else {
                        Sink::Count
                    };
                    let mut searcher = Searcher::new(pool, opts, budget, sink);
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(prefix) = prefixes.get(i) else {
                            break;
                        };
                        for (depth, &c) in prefix.iter().enumerate() {
                            searcher.push(depth, c as usize);
                        }
                        let r = searcher.descend(prefix.len());
                        for _ in prefix {
                            searcher.pop();
                        }
                        r?;
                    }
                    searcher.budget.flush()?;
                    Ok(searcher.tally)
                })
            })
            .collect();
        drop(tx);
        if let Some(v) = visitor.as_mut() {
            for chosen in rx.iter() {
                v(&chosen);
            }
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    for r in results {
        tally.merge(r.map_err(|_| aborted())?);
    }
    Ok(tally)
}
