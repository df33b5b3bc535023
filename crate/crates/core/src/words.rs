//! Words over the two alphabets and the θ-rewriting that puts mixed words in
//! normal form.
//!
//! A word is read left to right as operator composition, outermost first:
//! `s1 t2` is the operator `S_1 T_2`. The rule `S_i T_j -> T_{j'} S_{i'}`
//! with `θ(i,j) = (i',j')` moves every T-letter to the left, so normal forms
//! look like `T_w S_u`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    S,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub family: Family,
    /// 1-based.
    pub index: usize,
}

impl Letter {
    pub fn s(index: usize) -> Self {
        Letter {
            family: Family::S,
            index,
        }
    }

    pub fn t(index: usize) -> Self {
        Letter {
            family: Family::T,
            index,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::S => write!(f, "s{}", self.index),
            Family::T => write!(f, "t{}", self.index),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_s(indices: &[usize]) -> Self {
        Word(indices.iter().map(|&i| Letter::s(i)).collect())
    }

    pub fn from_t(indices: &[usize]) -> Self {
        Word(indices.iter().map(|&j| Letter::t(j)).collect())
    }

    /// `T_w S_u` as a single word.
    pub fn from_parts(t: &[usize], s: &[usize]) -> Self {
        let mut w = Word::from_t(t);
        w.0.extend(s.iter().map(|&i| Letter::s(i)));
        w
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// (#S-letters, #T-letters)
    pub fn bidegree(&self) -> (usize, usize) {
        let s = self.0.iter().filter(|l| l.family == Family::S).count();
        (s, self.0.len() - s)
    }

    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        for l in &self.0 {
            let bound = match l.family {
                Family::S => m,
                Family::T => n,
            };
            if l.index == 0 || l.index > bound {
                return Err(Error::Validation(format!("letter {l} out of range (bound {bound})")));
            }
        }
        Ok(())
    }

    /// True when the word has shape `T_w S_u`.
    pub fn is_normal(&self) -> bool {
        !self
            .0
            .windows(2)
            .any(|p| p[0].family == Family::S && p[1].family == Family::T)
    }

    /// Splits a normal word into its T-part and S-part. Returns `None` for
    /// words that are not normal.
    pub fn split_normal(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        if !self.is_normal() {
            return None;
        }
        let t = self
            .0
            .iter()
            .filter(|l| l.family == Family::T)
            .map(|l| l.index)
            .collect();
        let s = self
            .0
            .iter()
            .filter(|l| l.family == Family::S)
            .map(|l| l.index)
            .collect();
        Some((t, s))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (fam, rest) = tok.split_at(1);
            let family = match fam {
                "s" => Family::S,
                "t" => Family::T,
                _ => return Err(Error::Validation(format!("bad letter `{tok}`"))),
            };
            let index: usize = rest
                .parse()
                .map_err(|_| Error::Validation(format!("bad letter `{tok}`")))?;
            if index == 0 {
                return Err(Error::Validation(format!("letters are 1-based: `{tok}`")));
            }
            letters.push(Letter { family, index });
        }
        Ok(Word(letters))
    }
}

/// A permutation of `{1..m} x {1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Theta {
    m: usize,
    n: usize,
    forward: Vec<(usize, usize)>,
    backward: Vec<(usize, usize)>,
}

impl Theta {
    /// Builds θ from quadruples `[i, j, i', j']`, each meaning `θ(i,j) = (i',j')`.
    pub fn new(m: usize, n: usize, quads: &[[usize; 4]]) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Validation("theta needs m, n >= 1".into()));
        }
        let mut forward = vec![None; m * n];
        for q in quads {
            let [i, j, i2, j2] = *q;
            for (v, b) in [(i, m), (j, n), (i2, m), (j2, n)] {
                if v == 0 || v > b {
                    return Err(Error::Validation(format!(
                        "theta entry {q:?} out of range for m={m}, n={n}"
                    )));
                }
            }
            let slot = &mut forward[(i - 1) * n + (j - 1)];
            if slot.is_some() {
                return Err(Error::Validation(format!("theta({i},{j}) given twice")));
            }
            *slot = Some((i2, j2));
        }
        let forward: Vec<(usize, usize)> = forward
            .into_iter()
            .enumerate()
            .map(|(k, v)| v.ok_or_else(|| Error::Validation(format!("theta({},{}) undefined", k / n + 1, k % n + 1))))
            .collect::<Result<_>>()?;
        Self::from_table(m, n, forward)
    }

    fn from_table(m: usize, n: usize, forward: Vec<(usize, usize)>) -> Result<Self> {
        let mut backward = vec![None; m * n];
        for (k, &(i2, j2)) in forward.iter().enumerate() {
            let slot = &mut backward[(i2 - 1) * n + (j2 - 1)];
            if let Some((a, b)) = *slot {
                return Err(Error::Validation(format!(
                    "theta is not a bijection: ({a},{b}) and ({},{}) both map to ({i2},{j2})",
                    k / n + 1,
                    k % n + 1
                )));
            }
            *slot = Some((k / n + 1, k % n + 1));
        }
        Ok(Theta {
            m,
            n,
            forward,
            backward: backward.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn identity(m: usize, n: usize) -> Self {
        Self::from_fn(m, n, |i, j| (i, j)).expect("identity is a bijection")
    }

    pub fn from_fn(m: usize, n: usize, f: impl Fn(usize, usize) -> (usize, usize)) -> Result<Self> {
        let mut quads = Vec::with_capacity(m * n);
        for i in 1..=m {
            for j in 1..=n {
                let (a, b) = f(i, j);
                quads.push([i, j, a, b]);
            }
        }
        Self::new(m, n, &quads)
    }

    /// Every permutation of `{1..m} x {1..n}`, in lexicographic order of the
    /// forward table.
    pub fn all(m: usize, n: usize) -> Result<Vec<Theta>> {
        let size = m * n;
        let count: u128 = (1..=size as u128).product();
        if count > 1_000_000 {
            return Err(Error::Resource {
                what: "theta enumeration",
                needed: count,
                budget: 1_000_000,
            });
        }
        let cells: Vec<(usize, usize)> = (1..=m).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        let mut used = vec![false; size];
        let mut cur = Vec::with_capacity(size);
        fn rec(
            cells: &[(usize, usize)],
            used: &mut [bool],
            cur: &mut Vec<(usize, usize)>,
            out: &mut Vec<Vec<(usize, usize)>>,
        ) {
            if cur.len() == cells.len() {
                out.push(cur.clone());
                return;
            }
            for k in 0..cells.len() {
                if !used[k] {
                    used[k] = true;
                    cur.push(cells[k]);
                    rec(cells, used, cur, out);
                    cur.pop();
                    used[k] = false;
                }
            }
        }
        let mut tables = Vec::new();
        rec(&cells, &mut used, &mut cur, &mut tables);
        for t in tables {
            out.push(Self::from_table(m, n, t)?);
        }
        Ok(out)
    }

    /// Number of permutations of `{1..m} x {1..n}`.
    pub fn count(m: usize, n: usize) -> u128 {
        (1..=(m * n) as u128).product()
    }

    /// The `rank`-th θ in the order of [`Theta::all`], without enumerating
    /// the others.
    pub fn nth(m: usize, n: usize, rank: u128) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Validation("theta needs m, n >= 1".into()));
        }
        if rank >= Self::count(m, n) {
            return Err(Error::Validation(format!("theta rank {rank} out of range")));
        }
        let mut cells: Vec<(usize, usize)> = (1..=m).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
        let mut rest = rank;
        let mut table = Vec::with_capacity(cells.len());
        while !cells.is_empty() {
            let block: u128 = (1..cells.len() as u128).product();
            table.push(cells.remove((rest / block) as usize));
            rest %= block;
        }
        Self::from_table(m, n, table)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, i: usize, j: usize) -> (usize, usize) {
        self.forward[(i - 1) * self.n + (j - 1)]
    }

    pub fn inverse(&self, i2: usize, j2: usize) -> (usize, usize) {
        self.backward[(i2 - 1) * self.n + (j2 - 1)]
    }

    pub fn is_identity(&self) -> bool {
        self.forward
            .iter()
            .enumerate()
            .all(|(k, &p)| p == (k / self.n + 1, k % self.n + 1))
    }

    pub fn quads(&self) -> Vec<[usize; 4]> {
        self.forward
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| [k / self.n + 1, k % self.n + 1, a, b])
            .collect()
    }
}

/// `S_k T_c = T_{c'} S_{k'}`; returns `(c', k')`.
pub fn push_s_in(theta: &Theta, s: usize, t_word: &[usize]) -> (Vec<usize>, usize) {
    let mut carry = s;
    let mut out = Vec::with_capacity(t_word.len());
    for &j in t_word {
        let (i2, j2) = theta.apply(carry, j);
        out.push(j2);
        carry = i2;
    }
    (out, carry)
}

/// `T_c S_k = S_i T_{c'}`; returns `(i, c')`.
pub fn push_s_out(theta: &Theta, t_word: &[usize], s: usize) -> (usize, Vec<usize>) {
    let mut carry = s;
    let mut out = t_word.to_vec();
    for slot in out.iter_mut().rev() {
        let (i, j) = theta.inverse(carry, *slot);
        *slot = j;
        carry = i;
    }
    (carry, out)
}

/// `S_u T_j = T_{j'} S_{u'}`; returns `(j', u')`.
pub fn push_t_out(theta: &Theta, s_word: &[usize], t: usize) -> (usize, Vec<usize>) {
    let mut carry = t;
    let mut out = s_word.to_vec();
    for slot in out.iter_mut().rev() {
        let (i2, j2) = theta.apply(*slot, carry);
        *slot = i2;
        carry = j2;
    }
    (carry, out)
}

/// `T_j S_u = S_{u'} T_{j'}`; returns `(u', j')`.
pub fn push_t_in(theta: &Theta, t: usize, s_word: &[usize]) -> (Vec<usize>, usize) {
    let mut carry = t;
    let mut out = Vec::with_capacity(s_word.len());
    for &i2 in s_word {
        let (i, j) = theta.inverse(i2, carry);
        out.push(i);
        carry = j;
    }
    (out, carry)
}

/// Rewrites `S_a T_c` as `T_w S_u`; returns `(w, u)`.
pub fn to_t_outside(theta: &Theta, s_word: &[usize], t_word: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut s_cur = s_word.to_vec();
    let mut w = Vec::with_capacity(t_word.len());
    for &j in t_word {
        let (j2, s_next) = push_t_out(theta, &s_cur, j);
        w.push(j2);
        s_cur = s_next;
    }
    (w, s_cur)
}

/// Rewrites `T_w S_u` as `S_a T_c`; returns `(a, c)`.
pub fn to_s_outside(theta: &Theta, t_word: &[usize], s_word: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut t_cur = t_word.to_vec();
    let mut a = Vec::with_capacity(s_word.len());
    for &i in s_word {
        let (i2, t_next) = push_s_out(theta, &t_cur, i);
        a.push(i2);
        t_cur = t_next;
    }
    (a, t_cur)
}

/// Exhaustive leftmost rewriting `S_i T_j -> T_{j'} S_{i'}` until the word has
/// shape `T_w S_u`.
pub fn normalize(theta: &Theta, word: &Word) -> Result<Word> {
    word.validate(theta.m(), theta.n())?;
    let mut letters = word.0.clone();
    while let Some(k) = letters
        .windows(2)
        .position(|p| p[0].family == Family::S && p[1].family == Family::T)
    {
        let (i2, j2) = theta.apply(letters[k].index, letters[k + 1].index);
        letters[k] = Letter::t(j2);
        letters[k + 1] = Letter::s(i2);
    }
    Ok(Word(letters))
}

/// Every normal form reachable from `word` under any order of rule
/// applications.
pub fn normal_forms(theta: &Theta, word: &Word) -> Result<BTreeSet<Word>> {
    word.validate(theta.m(), theta.n())?;
    let mut memo = HashMap::new();
    Ok(nf_rec(theta, &word.0, &mut memo))
}

fn nf_rec(theta: &Theta, letters: &[Letter], memo: &mut HashMap<Vec<Letter>, BTreeSet<Word>>) -> BTreeSet<Word> {
    if let Some(r) = memo.get(letters) {
        return r.clone();
    }
    let mut out = BTreeSet::new();
    for k in 0..letters.len().saturating_sub(1) {
        if letters[k].family == Family::S && letters[k + 1].family == Family::T {
            let (i2, j2) = theta.apply(letters[k].index, letters[k + 1].index);
            let mut next = letters.to_vec();
            next[k] = Letter::t(j2);
            next[k + 1] = Letter::s(i2);
            out.extend(nf_rec(theta, &next, memo));
        }
    }
    if out.is_empty() {
        out.insert(Word(letters.to_vec()));
    }
    memo.insert(letters.to_vec(), out.clone());
    out
}

/// First word of length `<= max_len` (shortlex) with more than one normal
/// form, or whose normal form differs from [`normalize`].
pub fn confluence_counterexample(theta: &Theta, max_len: usize) -> Option<Word> {
    let alphabet: Vec<Letter> = (1..=theta.m())
        .map(Letter::s)
        .chain((1..=theta.n()).map(Letter::t))
        .collect();
    let mut memo = HashMap::new();
    for len in 0..=max_len {
        for idx in all_words(alphabet.len(), len) {
            let word = Word(idx.iter().map(|&a| alphabet[a - 1]).collect());
            let nfs = nf_rec(theta, &word.0, &mut memo);
            let det = normalize(theta, &word).expect("letters in range");
            if nfs.len() != 1 || !nfs.contains(&det) || !det.is_normal() {
                return Some(word);
            }
        }
    }
    None
}

pub fn concat(a: &Word, b: &Word) -> Word {
    let mut letters = a.0.clone();
    letters.extend_from_slice(&b.0);
    Word(letters)
}

/// All words of length `len` over `{1..alphabet}`, lexicographic.
pub fn all_words(alphabet: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * alphabet);
        for w in &out {
            for a in 1..=alphabet {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// The induced permutation of `F_m^k x F_n^l`: `(u, w) -> (u', w')` with
/// `S_u T_w = T_{w'} S_{u'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaExt {
    pub k: usize,
    pub l: usize,
    pub map: BTreeMap<WordPair, WordPair>,
}

impl ThetaExt {
    pub fn get(&self, u: &[usize], w: &[usize]) -> Option<&(Vec<usize>, Vec<usize>)> {
        self.map.get(&(u.to_vec(), w.to_vec()))
    }

    pub fn is_bijection(&self) -> bool {
        let mut images: Vec<_> = self.map.values().collect();
        images.sort();
        images.dedup();
        images.len() == self.map.len() && self.map.values().all(|(u, w)| u.len() == self.k && w.len() == self.l)
    }
}

/// `(u, w)`: an S-word and a T-word.
pub type WordPair = (Vec<usize>, Vec<usize>);

pub const THETA_EXT_BUDGET: u128 = 1_000_000;

pub fn theta_ext(theta: &Theta, k: usize, l: usize) -> Result<ThetaExt> {
    let needed = (theta.m() as u128)
        .checked_pow(k as u32)
        .and_then(|a| (theta.n() as u128).checked_pow(l as u32).and_then(|b| a.checked_mul(b)))
        .unwrap_or(u128::MAX);
    if needed > THETA_EXT_BUDGET {
        return Err(Error::Resource {
            what: "theta extension",
            needed,
            budget: THETA_EXT_BUDGET,
        });
    }
    let mut map = BTreeMap::new();
    for u in all_words(theta.m(), k) {
        for w in all_words(theta.n(), l) {
            let (w2, u2) = to_t_outside(theta, &u, &w);
            map.insert((u.clone(), w), (u2, w2));
        }
    }
    Ok(ThetaExt { k, l, map })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn identity_swaps_order() {
        let th = Theta::identity(2, 2);
        assert_eq!(normalize(&th, &w("s1 t2")).unwrap(), w("t2 s1"));
    }

    #[test]
    fn single_rule_application() {
        let th = Theta::from_fn(2, 2, |i, j| {
            if (i, j) == (1, 1) {
                (2, 2)
            } else if (i, j) == (2, 2) {
                (1, 1)
            } else {
                (i, j)
            }
        })
        .unwrap();
        assert_eq!(normalize(&th, &w("s1 t1")).unwrap(), w("t2 s2"));
    }

    #[test]
    fn rejects_out_of_range() {
        let th = Theta::identity(2, 1);
        assert!(matches!(normalize(&th, &w("s3")), Err(Error::Validation(_))));
        assert!(matches!(normalize(&th, &w("t2")), Err(Error::Validation(_))));
        assert!("x1".parse::<Word>().is_err());
        assert!("s0".parse::<Word>().is_err());
    }

    #[test]
    fn theta_rejects_non_bijection() {
        let err = Theta::new(1, 2, &[[1, 1, 1, 1], [1, 2, 1, 1]]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(Theta::new(1, 2, &[[1, 1, 1, 1]]).is_err());
    }

    #[test]
    fn all_thetas_counted() {
        assert_eq!(Theta::all(2, 2).unwrap().len(), 24);
        assert_eq!(Theta::all(1, 3).unwrap().len(), 6);
        assert!(Theta::all(3, 4).is_err());
    }

    #[test]
    fn ext_edge_cases() {
        let th = Theta::new(2, 2, &[[1, 1, 2, 2], [1, 2, 1, 1], [2, 1, 2, 1], [2, 2, 1, 2]]).unwrap();
        let e = theta_ext(&th, 0, 3).unwrap();
        assert_eq!(e.map.len(), 8);
        assert!(e.map.iter().all(|(a, b)| a == b));
        let e11 = theta_ext(&th, 1, 1).unwrap();
        for i in 1..=2 {
            for j in 1..=2 {
                let (a, b) = th.apply(i, j);
                assert_eq!(e11.get(&[i], &[j]), Some(&(vec![a], vec![b])));
            }
        }
        let id = theta_ext(&Theta::identity(2, 2), 2, 2).unwrap();
        assert!(id.map.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn ext_flip_is_bijective() {
        let th = Theta::new(2, 1, &[[1, 1, 2, 1], [2, 1, 1, 1]]).unwrap();
        let e = theta_ext(&th, 2, 1).unwrap();
        assert_eq!(e.map.len(), 4);
        assert!(e.is_bijection());
    }

    #[test]
    fn ext_budget() {
        let th = Theta::identity(3, 3);
        assert!(matches!(theta_ext(&th, 7, 7), Err(Error::Resource { .. })));
    }

    #[test]
    fn push_helpers_agree_with_normalize() {
        for th in Theta::all(2, 2).unwrap() {
            for s in all_words(2, 2) {
                for t in all_words(2, 2) {
                    let (w2, u2) = to_t_outside(&th, &s, &t);
                    let mut word = Word::from_s(&s);
                    word.0.extend(Word::from_t(&t).0);
                    assert_eq!(normalize(&th, &word).unwrap(), Word::from_parts(&w2, &u2));
                    let (a, c) = to_s_outside(&th, &w2, &u2);
                    assert_eq!((a, c), (s.clone(), t.clone()));
                }
            }
        }
    }

    #[test]
    fn serialization_format() {
        let word = Word(vec![Letter::s(1), Letter::s(2), Letter::t(1)]);
        assert_eq!(word.to_string(), "s1 s2 t1");
        assert_eq!("s1 s2 t1".parse::<Word>().unwrap(), word);
        assert_eq!(Word::empty().to_string(), "");
    }

    // Independent of the library rewriter: explores every rule application
    // order without memoisation.
    fn every_order(theta: &Theta, letters: Vec<Letter>, out: &mut BTreeSet<Vec<Letter>>) {
        let mut moved = false;
        for k in 0..letters.len().saturating_sub(1) {
            if letters[k].family == Family::S && letters[k + 1].family == Family::T {
                moved = true;
                let (i2, j2) = theta.apply(letters[k].index, letters[k + 1].index);
                let mut next = letters.clone();
                next[k] = Letter::t(j2);
                next[k + 1] = Letter::s(i2);
                every_order(theta, next, out);
            }
        }
        if !moved {
            out.insert(letters);
        }
    }

    #[test]
    fn cyclic_theta_example() {
        // (1,1) -> (1,2) -> (2,1) -> (2,2) -> (1,1)
        let th = Theta::new(2, 2, &[[1, 1, 1, 2], [1, 2, 2, 1], [2, 1, 2, 2], [2, 2, 1, 1]]).unwrap();
        let word = w("s1 s2 t1 t2");
        let mut all = BTreeSet::new();
        every_order(&th, word.0.clone(), &mut all);
        assert_eq!(all.len(), 1);
        let expected = w("t1 t2 s2 s1");
        assert_eq!(all.into_iter().next().unwrap(), expected.0);
        assert_eq!(normalize(&th, &word).unwrap(), expected);
        assert_eq!(normal_forms(&th, &word).unwrap(), BTreeSet::from([expected]));
    }

    #[test]
    fn nth_matches_all() {
        for (m, n) in [(1, 1), (2, 2), (1, 3), (3, 1)] {
            let all = Theta::all(m, n).unwrap();
            assert_eq!(all.len() as u128, Theta::count(m, n));
            for (k, th) in all.iter().enumerate() {
                assert_eq!(&Theta::nth(m, n, k as u128).unwrap(), th);
            }
        }
        assert!(Theta::nth(2, 2, 24).is_err());
        let last = Theta::nth(3, 3, Theta::count(3, 3) - 1).unwrap();
        assert_eq!(last.apply(1, 1), (3, 3));
    }

    #[test]
    fn small_confluence() {
        for th in Theta::all(2, 2).unwrap() {
            assert_eq!(confluence_counterexample(&th, 4), None);
        }
    }

    fn word_strategy(m: usize, n: usize) -> impl proptest::strategy::Strategy<Value = Word> {
        use proptest::prelude::*;
        proptest::collection::vec((any::<bool>(), 1..=m.max(n)), 0..8).prop_map(move |v| {
            Word(
                v.into_iter()
                    .map(|(s, k)| {
                        if s {
                            Letter::s((k - 1) % m + 1)
                        } else {
                            Letter::t((k - 1) % n + 1)
                        }
                    })
                    .collect(),
            )
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(1000))]

        #[test]
        fn normalize_respects_concat(
            rank in 0u128..720,
            x in word_strategy(2, 3),
            y in word_strategy(2, 3),
        ) {
            let th = Theta::nth(2, 3, rank).unwrap();
            let whole = normalize(&th, &concat(&x, &y)).unwrap();
            let parts = normalize(
                &th,
                &concat(&normalize(&th, &x).unwrap(), &normalize(&th, &y).unwrap()),
            )
            .unwrap();
            proptest::prop_assert_eq!(&whole, &parts);
            proptest::prop_assert_eq!(normalize(&th, &whole).unwrap(), whole.clone());
            proptest::prop_assert_eq!(whole.bidegree(), concat(&x, &y).bidegree());
        }

        #[test]
        fn concat_is_associative(x in word_strategy(2, 2), y in word_strategy(2, 2), z in word_strategy(2, 2)) {
            proptest::prop_assert_eq!(concat(&concat(&x, &y), &z), concat(&x, &concat(&y, &z)));
            proptest::prop_assert_eq!(concat(&Word::empty(), &x), x.clone());
            proptest::prop_assert_eq!(concat(&x, &Word::empty()), x);
        }
    }
}
