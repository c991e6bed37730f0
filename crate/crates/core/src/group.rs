//! Group models: finite groups given by a Cayley table, and symbolic free /
//! free-abelian groups with reduced-word elements.
//!
//! Finite tables are fully verified at construction (closure, identity,
//! inverses, associativity over all triples). Symbolic groups have a
//! decidable, confluent word reduction and are only ever materialized on
//! bounded balls.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Build and verify a finite group from element names and a
    /// multiplication table given in names: `table[i][j] = names of
    /// element_i * element_j`.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<String>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGroup(
                "a group needs at least one element".into(),
            ));
        }
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidGroup(format!(
                    "duplicate element name {name}"
                )));
            }
        }
        if table.len() != n {
            return Err(Error::InvalidGroup(
                "table must have one row per element".into(),
            ));
        }
        let mut mul = vec![vec![0usize; n]; n];
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {} has {} entries, expected {}",
                    names[i],
                    row.len(),
                    n
                )));
            }
            for (j, name) in row.iter().enumerate() {
                mul[i][j] = *index.get(name).ok_or_else(|| {
                    Error::InvalidGroup(format!("table entry {name} is not an element"))
                })?;
            }
        }
        // rows and columns must be permutations
        for i in 0..n {
            let row: BTreeSet<usize> = mul[i].iter().copied().collect();
            let col: BTreeSet<usize> = (0..n).map(|j| mul[j][i]).collect();
            if row.len() != n || col.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "element {} does not act bijectively in the table",
                    names[i]
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|i| mul[e][i] == i && mul[i][e] == i))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for i in 0..n {
            let inv = (0..n).find(|&j| mul[i][j] == identity && mul[j][i] == identity);
            inverse[i] =
                inv.ok_or_else(|| Error::InvalidGroup(format!("{} has no inverse", names[i])))?;
        }
        // exhaustive associativity check
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            names,
            index,
            table: mul,
            identity,
            inverse,
        })
    }

    /// The cyclic group of the given order, elements named "0".."n-1".
    pub fn cyclic(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup(
                "cyclic group order must be positive".into(),
            ));
        }
        let names: Vec<String> = (0..order).map(|i| i.to_string()).collect();
        let table: Vec<Vec<String>> = (0..order)
            .map(|i| (0..order).map(|j| ((i + j) % order).to_string()).collect())
            .collect();
        Self::from_table(names, table)
    }

    /// The symmetric group on `degree` points. Elements are named by their
    /// one-line notation on 1..degree, e.g. "213" swaps 1 and 2; the identity
    /// "12...d" sorts first.
    pub fn symmetric(degree: usize) -> Result<Self> {
        if degree == 0 || degree > 9 {
            return Err(Error::InvalidGroup(
                "symmetric group degree must be between 1 and 9".into(),
            ));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = (0..degree).collect();
        loop {
            perms.push(current.clone());
            if !next_permutation(&mut current) {
                break;
            }
        }
        let name_of = |p: &[usize]| -> String {
            p.iter()
                .map(|x| (x + 1).to_string())
                .collect::<Vec<_>>()
                .join("")
        };
        let names: Vec<String> = perms.iter().map(|p| name_of(p)).collect();
        // (p*q)(x) = p(q(x))
        let table: Vec<Vec<String>> = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let composed: Vec<usize> = (0..degree).map(|x| p[q[x]]).collect();
                        name_of(&composed)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(names, table)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The multiplication table in element names, row-major.
    pub fn table_names(&self) -> Vec<Vec<String>> {
        self.table
            .iter()
            .map(|row| row.iter().map(|&k| self.names[k].clone()).collect())
            .collect()
    }

    fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Closure of a set of element indices under multiplication.
    pub fn closure(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        seen.insert(self.identity);
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(self.identity);
        while let Some(g) = queue.pop_front() {
            for &s in gens {
                let h = self.mul_idx(g, s);
                if seen.insert(h) {
                    queue.push_back(h);
                }
            }
        }
        seen
    }

    /// Express each group element as a product of the given generators:
    /// `words[i]` lists generator positions whose left-to-right product is
    /// element `i`. Returns `None` when the generators do not generate.
    pub fn express_all(&self, gens: &[usize]) -> Option<Vec<Vec<usize>>> {
        let n = self.order();
        let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
        words[self.identity] = Some(Vec::new());
        let mut queue = VecDeque::new();
        queue.push_back(self.identity);
        while let Some(g) = queue.pop_front() {
            for (pos, &s) in gens.iter().enumerate() {
                let h = self.mul_idx(g, s);
                if words[h].is_none() {
                    let mut w = words[g].clone().unwrap();
                    w.push(pos);
                    words[h] = Some(w);
                    queue.push_back(h);
                }
            }
        }
        words.into_iter().collect()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// An element of a [`GroupModel`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElem {
    /// Index into a finite group's element list.
    Finite(usize),
    /// Reduced word over free generators: (generator, exponent) with nonzero
    /// exponents and no adjacent repeats.
    Word(Vec<(usize, i64)>),
    /// Exponent vector in a free-abelian group.
    Vector(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupModel {
    Finite(FiniteGroup),
    Free { rank: usize },
    FreeAbelian { rank: usize },
}

impl GroupModel {
    pub fn cyclic(order: usize) -> Result<Self> {
        Ok(GroupModel::Finite(FiniteGroup::cyclic(order)?))
    }

    pub fn symmetric(degree: usize) -> Result<Self> {
        Ok(GroupModel::Finite(FiniteGroup::symmetric(degree)?))
    }

    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidGroup(
                "free group rank must be positive".into(),
            ));
        }
        Ok(GroupModel::Free { rank })
    }

    pub fn free_abelian(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidGroup(
                "free-abelian group rank must be positive".into(),
            ));
        }
        Ok(GroupModel::FreeAbelian { rank })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroupModel::Finite(_))
    }

    pub fn finite(&self) -> Option<&FiniteGroup> {
        match self {
            GroupModel::Finite(g) => Some(g),
            _ => None,
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.finite().map(FiniteGroup::order)
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            GroupModel::Free { rank } | GroupModel::FreeAbelian { rank } => Some(*rank),
            GroupModel::Finite(_) => None,
        }
    }

    pub fn identity(&self) -> GroupElem {
        match self {
            GroupModel::Finite(g) => GroupElem::Finite(g.identity),
            GroupModel::Free { .. } => GroupElem::Word(Vec::new()),
            GroupModel::FreeAbelian { rank } => GroupElem::Vector(vec![0; *rank]),
        }
    }

    pub fn is_identity(&self, a: &GroupElem) -> bool {
        *a == self.identity()
    }

    pub fn mul(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        match (self, a, b) {
            (GroupModel::Finite(g), GroupElem::Finite(i), GroupElem::Finite(j)) => {
                GroupElem::Finite(g.mul_idx(*i, *j))
            }
            (GroupModel::Free { .. }, GroupElem::Word(u), GroupElem::Word(w)) => {
                let mut out = u.clone();
                for &(g, e) in w {
                    push_syllable(&mut out, g, e);
                }
                GroupElem::Word(out)
            }
            (GroupModel::FreeAbelian { .. }, GroupElem::Vector(u), GroupElem::Vector(w)) => {
                GroupElem::Vector(u.iter().zip(w).map(|(x, y)| x + y).collect())
            }
            _ => panic!("group element does not belong to this group model"),
        }
    }

    pub fn inv(&self, a: &GroupElem) -> GroupElem {
        match (self, a) {
            (GroupModel::Finite(g), GroupElem::Finite(i)) => GroupElem::Finite(g.inverse[*i]),
            (GroupModel::Free { .. }, GroupElem::Word(w)) => {
                GroupElem::Word(w.iter().rev().map(|&(g, e)| (g, -e)).collect())
            }
            (GroupModel::FreeAbelian { .. }, GroupElem::Vector(v)) => {
                GroupElem::Vector(v.iter().map(|x| -x).collect())
            }
            _ => panic!("group element does not belong to this group model"),
        }
    }

    /// Reduced word length; the ℓ¹ norm for free-abelian elements.
    pub fn word_length(&self, a: &GroupElem) -> usize {
        match a {
            GroupElem::Finite(_) => 0,
            GroupElem::Word(w) => w.iter().map(|(_, e)| e.unsigned_abs() as usize).sum(),
            GroupElem::Vector(v) => v.iter().map(|x| x.unsigned_abs() as usize).sum(),
        }
    }

    /// All elements of a finite group, sorted by name. `None` for symbolic
    /// groups.
    pub fn elements(&self) -> Option<Vec<GroupElem>> {
        let g = self.finite()?;
        let mut order: Vec<usize> = (0..g.order()).collect();
        order.sort_by(|&a, &b| g.names[a].cmp(&g.names[b]));
        Some(order.into_iter().map(GroupElem::Finite).collect())
    }

    /// Canonical generators of a symbolic group. `None` for finite groups
    /// (their generating sets are chosen by the caller).
    pub fn symbolic_generators(&self) -> Option<Vec<GroupElem>> {
        match self {
            GroupModel::Free { rank } => {
                Some((0..*rank).map(|g| GroupElem::Word(vec![(g, 1)])).collect())
            }
            GroupModel::FreeAbelian { rank } => Some(
                (0..*rank)
                    .map(|g| {
                        let mut v = vec![0; *rank];
                        v[g] = 1;
                        GroupElem::Vector(v)
                    })
                    .collect(),
            ),
            GroupModel::Finite(_) => None,
        }
    }

    /// The ball of elements with word length at most `radius`, sorted by
    /// (length, rendering). For finite groups this is every element.
    pub fn ball(&self, radius: usize, cap: usize) -> Result<Vec<GroupElem>> {
        let mut elems: Vec<GroupElem> = match self {
            GroupModel::Finite(_) => self.elements().unwrap(),
            GroupModel::Free { .. } => {
                let gens: Vec<GroupElem> = self
                    .symbolic_generators()
                    .unwrap()
                    .into_iter()
                    .flat_map(|g| [self.inv(&g), g])
                    .collect();
                let mut seen: BTreeSet<String> = BTreeSet::new();
                let mut out = vec![self.identity()];
                seen.insert(self.elem_str(&out[0]));
                let mut frontier = out.clone();
                for _ in 0..radius {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for g in &gens {
                            let h = self.mul(w, g);
                            if self.word_length(&h) == self.word_length(w) + 1
                                && seen.insert(self.elem_str(&h))
                            {
                                next.push(h);
                                if out.len() + next.len() > cap {
                                    return Err(Error::ExplosionGuard { cap });
                                }
                            }
                        }
                    }
                    out.extend(next.iter().cloned());
                    frontier = next;
                }
                out
            }
            GroupModel::FreeAbelian { rank } => {
                let mut out = Vec::new();
                let mut v = vec![0i64; *rank];
                collect_l1_ball(&mut v, 0, radius as i64, &mut out, cap)?;
                out
            }
        };
        elems.sort_by_key(|a| (self.word_length(a), self.elem_str(a)));
        Ok(elems)
    }

    /// Canonical rendering: element name (finite), or a `*`-separated word
    /// like `a^2*b^-1`, with `1` for the identity.
    pub fn elem_str(&self, a: &GroupElem) -> String {
        match (self, a) {
            (GroupModel::Finite(g), GroupElem::Finite(i)) => g.names[*i].clone(),
            (GroupModel::Free { .. }, GroupElem::Word(w)) => {
                if w.is_empty() {
                    return "1".into();
                }
                w.iter()
                    .map(|&(g, e)| syllable_str(g, e))
                    .collect::<Vec<_>>()
                    .join("*")
            }
            (GroupModel::FreeAbelian { .. }, GroupElem::Vector(v)) => {
                let parts: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(g, &e)| syllable_str(g, e))
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join("*")
                }
            }
            _ => panic!("group element does not belong to this group model"),
        }
    }

    /// Parse the rendering produced by [`elem_str`](Self::elem_str). Finite
    /// elements are looked up by name; symbolic words are products of
    /// generator powers, `1` is the identity.
    pub fn parse_elem(&self, s: &str) -> Result<GroupElem> {
        let s = s.trim();
        match self {
            GroupModel::Finite(g) => g
                .index
                .get(s)
                .map(|&i| GroupElem::Finite(i))
                .ok_or_else(|| Error::Parse(format!("{s} is not an element of the group"))),
            GroupModel::Free { rank } | GroupModel::FreeAbelian { rank } => {
                let mut out = self.identity();
                if s == "1" || s.is_empty() {
                    return Ok(out);
                }
                for part in s.split('*') {
                    let (name, exp) = match part.split_once('^') {
                        Some((n, e)) => (
                            n.trim(),
                            e.trim()
                                .parse::<i64>()
                                .map_err(|_| Error::Parse(format!("bad exponent in {part}")))?,
                        ),
                        None => (part.trim(), 1),
                    };
                    let g = (0..*rank)
                        .find(|&g| generator_name(g) == name)
                        .ok_or_else(|| {
                            Error::Parse(format!("{name} is not a generator of the group"))
                        })?;
                    let syllable = match self {
                        GroupModel::Free { .. } => {
                            let mut w = Vec::new();
                            push_syllable(&mut w, g, exp);
                            GroupElem::Word(w)
                        }
                        GroupModel::FreeAbelian { rank } => {
                            let mut v = vec![0; *rank];
                            v[g] = exp;
                            GroupElem::Vector(v)
                        }
                        GroupModel::Finite(_) => unreachable!(),
                    };
                    out = self.mul(&out, &syllable);
                }
                Ok(out)
            }
        }
    }
}

fn push_syllable(word: &mut Vec<(usize, i64)>, g: usize, e: i64) {
    if e == 0 {
        return;
    }
    if let Some(last) = word.last_mut() {
        if last.0 == g {
            last.1 += e;
            if last.1 == 0 {
                word.pop();
            }
            return;
        }
    }
    word.push((g, e));
}

fn collect_l1_ball(
    v: &mut Vec<i64>,
    pos: usize,
    budget: i64,
    out: &mut Vec<GroupElem>,
    cap: usize,
) -> Result<()> {
    if pos == v.len() {
        out.push(GroupElem::Vector(v.clone()));
        if out.len() > cap {
            return Err(Error::ExplosionGuard { cap });
        }
        return Ok(());
    }
    for x in -budget..=budget {
        v[pos] = x;
        collect_l1_ball(v, pos + 1, budget - x.abs(), out, cap)?;
    }
    v[pos] = 0;
    Ok(())
}

/// Generator names: a, b, c, ... then x26, x27, ...
pub fn generator_name(g: usize) -> String {
    if g < 26 {
        ((b'a' + g as u8) as char).to_string()
    } else {
        format!("x{g}")
    }
}

fn syllable_str(g: usize, e: i64) -> String {
    if e == 1 {
        generator_name(g)
    } else {
        format!("{}^{}", generator_name(g), e)
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupModel::Finite(g) => write!(f, "finite group of order {}", g.order()),
            GroupModel::Free { rank } => write!(f, "free group of rank {rank}"),
            GroupModel::FreeAbelian { rank } => write!(f, "free-abelian group of rank {rank}"),
        }
    }
}
