//! Toppling dynamics on the segment `0..=n+1`.
//!
//! A site holding two or more chips topples by sending the smaller of two
//! of its chips one site left and the larger one site right. The final
//! configuration does not depend on the order of topplings, so the
//! randomized and the pass-based stabilizers must agree.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Chips per site over `0..=n+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToppleState {
    n: usize,
    sites: Vec<Vec<usize>>,
}

impl ToppleState {
    pub fn new(config: &Configuration) -> Self {
        let n = config.n();
        let mut sites = vec![Vec::with_capacity(2); n + 2];
        for (i, chips) in config.sites().enumerate() {
            sites[i + 1].extend_from_slice(chips);
        }
        ToppleState { n, sites }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chips_at(&self, site: usize) -> &[usize] {
        &self.sites[site]
    }

    pub fn is_stable(&self) -> bool {
        self.sites.iter().all(|s| s.len() < 2)
    }

    /// Sites holding two or more chips.
    pub fn eligible(&self) -> impl Iterator<Item = usize> + '_ {
        self.sites
            .iter()
            .enumerate()
            .filter(|(_, s)| s.len() >= 2)
            .map(|(i, _)| i)
    }

    /// Topples `site`. With `pair == None` the site must hold exactly two
    /// chips; otherwise `pair` names the two chips (by label) to move.
    pub fn topple_step(&mut self, site: usize, pair: Option<(usize, usize)>) -> Result<()> {
        let count = self.sites.get(site).map_or(0, Vec::len);
        if count < 2 {
            return Err(Error::TooFewChips { site, count });
        }
        assert!(
            (1..=self.n).contains(&site),
            "chips escaped the segment 0..={}: site {site} is unstable",
            self.n + 1
        );
        let (alpha, beta) = match pair {
            None if count == 2 => {
                let s = &self.sites[site];
                (s[0].min(s[1]), s[0].max(s[1]))
            }
            None => {
                return Err(Error::Precondition(format!(
                    "site {site} holds {count} chips; name the pair to topple"
                )))
            }
            Some((a, b)) => {
                for c in [a, b] {
                    if a == b || !self.sites[site].contains(&c) {
                        return Err(Error::ChipNotAtSite { chip: c, site });
                    }
                }
                (a.min(b), a.max(b))
            }
        };
        self.sites[site].retain(|&c| c != alpha && c != beta);
        self.sites[site - 1].push(alpha);
        self.sites[site + 1].push(beta);
        Ok(())
    }

    fn topple_random<R: Rng>(&mut self, site: usize, rng: &mut R) {
        let s = &self.sites[site];
        let pair = if s.len() == 2 {
            None
        } else {
            let idx = sample(rng, s.len(), 2);
            Some((s[idx.index(0)], s[idx.index(1)]))
        };
        self.topple_step(site, pair).expect("eligible site");
    }

    /// Deterministic step used by the pass protocol; a site never holds more
    /// than two chips there, but extremes are chosen if it ever does.
    fn topple_extremes(&mut self, site: usize) {
        let s = &self.sites[site];
        debug_assert_eq!(s.len(), 2, "pass protocol produced a triple");
        let lo = *s.iter().min().unwrap();
        let hi = *s.iter().max().unwrap();
        self.topple_step(site, Some((lo, hi))).expect("eligible site");
    }

    fn occupancy(&self) -> Vec<Option<usize>> {
        self.sites.iter().map(|s| s.first().copied()).collect()
    }

    /// Converts a stable state.
    pub fn into_final(self) -> Result<FinalState> {
        if !self.is_stable() {
            return Err(Error::Precondition("state is not stable".into()));
        }
        FinalState::new(self.occupancy())
    }
}

/// A stable state: one chip on every site of `0..=n+1` but one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinalState {
    occupancy: Vec<Option<usize>>,
    empty_site: usize,
}

impl FinalState {
    fn new(occupancy: Vec<Option<usize>>) -> Result<Self> {
        let empties: Vec<usize> = occupancy
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_none())
            .map(|(i, _)| i)
            .collect();
        match empties[..] {
            [e] => Ok(FinalState {
                occupancy,
                empty_site: e,
            }),
            _ => Err(Error::Precondition(format!(
                "final state has {} empty sites",
                empties.len()
            ))),
        }
    }

    pub fn occupancy(&self) -> &[Option<usize>] {
        &self.occupancy
    }

    pub fn empty_site(&self) -> usize {
        self.empty_site
    }

    /// Chips read left to right, skipping the empty site.
    pub fn resultant(&self) -> Permutation {
        Permutation::from_vec_unchecked(self.occupancy.iter().flatten().copied().collect())
    }

    pub fn is_sorted(&self) -> bool {
        self.occupancy
            .iter()
            .flatten()
            .enumerate()
            .all(|(i, &c)| c == i + 1)
    }
}

/// Layout after one pass, split at the first and last empty sites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassSnapshot {
    pub left_arm: Vec<usize>,
    /// Sites strictly between the two empty sites; empty after the last pass.
    pub active_part: Vec<Vec<usize>>,
    pub right_arm: Vec<usize>,
    pub topples: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct PassTrace {
    pub passes: Vec<PassSnapshot>,
}

impl PassTrace {
    pub fn len(&self) -> usize {
        self.passes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passes.is_empty()
    }
}

/// Stabilizes under a random schedule: a uniform unstable site, then a
/// uniform pair of its chips. Returns the final state and the number of
/// topplings.
pub fn stabilize_random(config: &Configuration, seed: u64) -> (FinalState, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = ToppleState::new(config);
    let mut topples = 0;
    let mut eligible = Vec::new();
    loop {
        eligible.clear();
        eligible.extend(state.eligible());
        if eligible.is_empty() {
            break;
        }
        let site = eligible[rng.gen_range(0..eligible.len())];
        state.topple_random(site, &mut rng);
        topples += 1;
    }
    (state.into_final().expect("stable"), topples)
}

/// Stabilizes in passes and records a snapshot after each one.
pub fn stabilize_passes(config: &Configuration) -> (FinalState, PassTrace) {
    let mut trace = PassTrace::default();
    let state = run_passes(config, |state, topples| {
        trace.passes.push(snapshot(state, topples));
    });
    (state.into_final().expect("stable"), trace)
}

/// Pass-based stabilization without a trace.
pub fn stabilize(config: &Configuration) -> FinalState {
    run_passes(config, |_, _| {}).into_final().expect("stable")
}

/// Each pass topples site `p` once, then any other unstable site until only
/// `p` (if anything) remains unstable.
fn run_passes(config: &Configuration, mut on_pass: impl FnMut(&ToppleState, u64)) -> ToppleState {
    let p = config.p();
    let mut state = ToppleState::new(config);
    let mut stack = Vec::with_capacity(4);
    while !state.is_stable() {
        let mut topples = 0;
        stack.clear();
        if state.sites[p].len() >= 2 {
            state.topple_extremes(p);
            topples += 1;
            stack.extend([p - 1, p + 1]);
        } else {
            stack.extend(state.eligible().filter(|&s| s != p));
        }
        while let Some(site) = stack.pop() {
            if site == p || state.sites[site].len() < 2 {
                continue;
            }
            state.topple_extremes(site);
            topples += 1;
            stack.extend([site - 1, site + 1]);
        }
        on_pass(&state, topples);
    }
    state
}

fn snapshot(state: &ToppleState, topples: u64) -> PassSnapshot {
    let occ = &state.sites;
    let first = occ.iter().position(Vec::is_empty);
    let last = occ.iter().rposition(Vec::is_empty);
    let single = |s: &Vec<usize>| s[0];
    match (first, last) {
        (Some(a), Some(b)) => PassSnapshot {
            left_arm: occ[..a].iter().map(single).collect(),
            active_part: if b > a { occ[a + 1..b].to_vec() } else { Vec::new() },
            right_arm: occ[b + 1..].iter().map(single).collect(),
            topples,
        },
        _ => PassSnapshot {
            left_arm: Vec::new(),
            active_part: occ.clone(),
            right_arm: Vec::new(),
            topples,
        },
    }
}

/// The permutation in `S_{n+1}` that `config` topples to, and the empty
/// site of the final state.
pub fn resultant(config: &Configuration) -> (Permutation, usize) {
    let fin = stabilize(config);
    (fin.resultant(), fin.empty_site())
}
