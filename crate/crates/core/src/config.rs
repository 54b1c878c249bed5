//! Initial configurations: `n + 1` labeled chips on sites `1..=n`, with two
//! chips on the doubled site `p`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A configuration in `S(n, p)`.
///
/// Chips are stored flat in site order. The pair on site `p` occupies two
/// consecutive slots and is kept sorted, so derived equality and hashing
/// treat it as an unordered set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    n: usize,
    p: usize,
    chips: Vec<usize>,
}

impl Configuration {
    /// Builds a configuration from its sites in order; exactly one site must
    /// hold two chips and the labels must be `1..=n+1`.
    pub fn from_sites(sites: &[Vec<usize>]) -> Result<Self> {
        let n = sites.len();
        if n == 0 {
            return Err(Error::InvalidConfiguration("no sites".into()));
        }
        let mut p = None;
        let mut chips = Vec::with_capacity(n + 1);
        for (i, site) in sites.iter().enumerate() {
            match site.len() {
                1 => chips.push(site[0]),
                2 => {
                    if p.replace(i + 1).is_some() {
                        return Err(Error::InvalidConfiguration(
                            "more than one doubled site".into(),
                        ));
                    }
                    chips.push(site[0].min(site[1]));
                    chips.push(site[0].max(site[1]));
                }
                k => {
                    return Err(Error::InvalidConfiguration(format!(
                        "site {} holds {k} chips",
                        i + 1
                    )))
                }
            }
        }
        let p = p.ok_or_else(|| Error::InvalidConfiguration("no doubled site".into()))?;
        Self::from_flat(n, p, chips)
    }

    /// `chips` lists the labels in site order with the two chips of site `p`
    /// adjacent (in either order).
    pub fn from_flat(n: usize, p: usize, mut chips: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfiguration("no sites".into()));
        }
        Error::check_range("p", p, 1, n)?;
        if chips.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                found: chips.len(),
            });
        }
        let mut seen = vec![false; n + 2];
        for &c in &chips {
            if c == 0 || c > n + 1 {
                return Err(Error::InvalidConfiguration(format!(
                    "chip {c} outside 1..={}",
                    n + 1
                )));
            }
            if seen[c] {
                return Err(Error::InvalidConfiguration(format!("chip {c} repeated")));
            }
            seen[c] = true;
        }
        if chips[p - 1] > chips[p] {
            chips.swap(p - 1, p);
        }
        Ok(Configuration { n, p, chips })
    }

    pub(crate) fn from_flat_unchecked(n: usize, p: usize, mut chips: Vec<usize>) -> Self {
        if chips[p - 1] > chips[p] {
            chips.swap(p - 1, p);
        }
        debug_assert!(Self::from_flat(n, p, chips.clone()).is_ok());
        Configuration { n, p, chips }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Chips in site order; the pair of site `p` is sorted.
    pub fn chips(&self) -> &[usize] {
        &self.chips
    }

    /// The two chips on site `p`, smaller first.
    pub fn pair(&self) -> (usize, usize) {
        (self.chips[self.p - 1], self.chips[self.p])
    }

    /// Chips on site `i` (1-based).
    pub fn site(&self, i: usize) -> &[usize] {
        assert!((1..=self.n).contains(&i), "site {i} outside 1..={}", self.n);
        let p = self.p;
        match i.cmp(&p) {
            std::cmp::Ordering::Less => &self.chips[i - 1..i],
            std::cmp::Ordering::Equal => &self.chips[p - 1..=p],
            std::cmp::Ordering::Greater => &self.chips[i..=i],
        }
    }

    pub fn sites(&self) -> impl Iterator<Item = &[usize]> + '_ {
        (1..=self.n).map(move |i| self.site(i))
    }

    /// `site_of[c]` is the site of chip `c`; index 0 is unused.
    pub fn site_of(&self) -> Vec<usize> {
        let mut pos = vec![0; self.n + 2];
        for (idx, &c) in self.chips.iter().enumerate() {
            pos[c] = if idx < self.p { idx + 1 } else { idx };
        }
        pos
    }

    /// Reflects sites `i -> n+1-i` and relabels chips `c -> n+2-c`; the
    /// doubled site moves to `n+1-p`.
    pub fn reverse_complement(&self) -> Configuration {
        let n = self.n;
        let chips = self.chips.iter().rev().map(|&c| n + 2 - c).collect();
        Configuration::from_flat_unchecked(n, n + 1 - self.p, chips)
    }

    /// The two ways this configuration arises as a lift `pi^(r,p)`, one per
    /// chip on site `p`, smaller chip first.
    pub fn unlift(&self) -> [(Permutation, usize); 2] {
        let (a, b) = self.pair();
        [(self.delete_chip(a), a), (self.delete_chip(b), b)]
    }

    fn delete_chip(&self, r: usize) -> Permutation {
        let values = self
            .chips
            .iter()
            .filter(|&&c| c != r)
            .map(|&c| if c > r { c - 1 } else { c })
            .collect();
        Permutation::from_vec_unchecked(values)
    }

    pub fn mark(self, r: usize) -> Result<MarkedConfiguration> {
        let (a, b) = self.pair();
        if r != a && r != b {
            return Err(Error::ChipNotAtSite {
                chip: r,
                site: self.p,
            });
        }
        Ok(MarkedConfiguration {
            config: self,
            mark: r,
        })
    }
}

/// `pi^(r,p)`: chips `pi_i` (shifted up by one when `>= r`) on sites `1..=n`
/// and the extra chip `r` on site `p`, marked.
pub fn lift(pi: &Permutation, r: usize, p: usize) -> Result<MarkedConfiguration> {
    let n = pi.len();
    Error::check_range("r", r, 1, n + 1)?;
    Error::check_range("p", p, 1, n)?;
    let mut chips = Vec::with_capacity(n + 1);
    for (i, &v) in pi.values().iter().enumerate() {
        chips.push(if v < r { v } else { v + 1 });
        if i + 1 == p {
            chips.push(r);
        }
    }
    Ok(MarkedConfiguration {
        config: Configuration::from_flat_unchecked(n, p, chips),
        mark: r,
    })
}

/// A configuration with one of the two chips on site `p` distinguished.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedConfiguration {
    config: Configuration,
    mark: usize,
}

impl MarkedConfiguration {
    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn into_config(self) -> Configuration {
        self.config
    }

    pub fn mark(&self) -> usize {
        self.mark
    }

    pub fn unmarked(&self) -> usize {
        let (a, b) = self.config.pair();
        if a == self.mark {
            b
        } else {
            a
        }
    }

    /// The permutation underlying this marked configuration.
    pub fn unlift(&self) -> Permutation {
        self.config.delete_chip(self.mark)
    }

    /// The map `w` into `S_{n+1}`: sites read left to right, with the
    /// unmarked chip of site `p` at position `p` and the mark at `p + 1`.
    pub fn map_w(&self) -> Permutation {
        let p = self.config.p;
        let mut v = self.config.chips.clone();
        v[p - 1] = self.unmarked();
        v[p] = self.mark;
        Permutation::from_vec_unchecked(v)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sites(f, self, None)
    }
}

impl fmt::Display for MarkedConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sites(f, &self.config, Some(self.mark))
    }
}

fn write_sites(f: &mut fmt::Formatter<'_>, c: &Configuration, mark: Option<usize>) -> fmt::Result {
    let star = |x: usize| if Some(x) == mark { "*" } else { "" };
    for i in 1..=c.n {
        if i > 1 {
            f.write_str(",")?;
        }
        match c.site(i) {
            [x] => write!(f, "{x}")?,
            [a, b] => write!(f, "({a}{},{b}{})", star(*a), star(*b))?,
            _ => unreachable!(),
        }
    }
    Ok(())
}

/// Parses `7,3,1,5,(2,4),6,8`; a `*` after a chip in the pair marks it.
fn parse_sites(s: &str) -> Result<(Vec<Vec<usize>>, Option<usize>)> {
    let mut sites = Vec::new();
    let mut mark = None;
    let mut rest = s.trim();
    let chip = |tok: &str, mark: &mut Option<usize>| -> Result<usize> {
        let tok = tok.trim();
        let (num, starred) = match tok.strip_suffix('*') {
            Some(t) => (t.trim(), true),
            None => (tok, false),
        };
        let v = num
            .parse::<usize>()
            .map_err(|_| Error::parse(tok, "expected a chip label"))?;
        if starred && mark.replace(v).is_some() {
            return Err(Error::parse(tok, "more than one marked chip"));
        }
        Ok(v)
    };
    while !rest.is_empty() {
        if let Some(inner) = rest.strip_prefix('(') {
            let close = inner
                .find(')')
                .ok_or_else(|| Error::parse(rest, "unclosed `(`"))?;
            let group = &inner[..close];
            let site = group
                .split(',')
                .map(|t| chip(t, &mut mark))
                .collect::<Result<Vec<_>>>()?;
            if site.len() != 2 {
                return Err(Error::parse(group, "a parenthesized site holds exactly two chips"));
            }
            sites.push(site);
            rest = inner[close + 1..].trim_start();
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            let tok = &rest[..end];
            if tok.contains('*') {
                return Err(Error::parse(tok, "only a chip on the doubled site can be marked"));
            }
            sites.push(vec![chip(tok, &mut mark)?]);
            rest = &rest[end..];
        }
        rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(Error::parse(s, "trailing comma"));
            }
        } else if !rest.is_empty() {
            return Err(Error::parse(rest, "expected `,`"));
        }
    }
    Ok((sites, mark))
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (sites, mark) = parse_sites(s)?;
        if let Some(m) = mark {
            return Err(Error::parse(format!("{m}*"), "unexpected mark in a plain configuration"));
        }
        Configuration::from_sites(&sites)
    }
}

impl FromStr for MarkedConfiguration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (sites, mark) = parse_sites(s)?;
        let mark = mark.ok_or_else(|| Error::parse(s, "no chip marked with `*`"))?;
        Configuration::from_sites(&sites)?.mark(mark)
    }
}
