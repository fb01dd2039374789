//! Finite groups stored as multiplication tables.
//!
//! Elements are indices `0..n` with the identity at `0`. Subgroups are sorted
//! member lists over the ambient indices. All enumeration orders are fixed so
//! every derived object is deterministic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::hash::{Hash, Hasher};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo::prime_part;
use crate::error::{Error, Result};

/// Default cap on group orders.
pub const DEFAULT_SIZE_CAP: usize = 2000;

/// Largest order for which associativity is checked on every triple.
const FULL_ASSOC_CHECK: usize = 512;

/// Input description of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    /// Full multiplication table: `table[a][b]` is the index of `ab`.
    Table {
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    },
    /// Permutation generators on `points` points, each a list of cycles with
    /// 1-based points.
    Permutations { points: usize, gens: Vec<Vec<Vec<usize>>> },
}

/// A validated finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    orders: Vec<u32>,
    classes: Vec<Vec<u32>>,
    class_of: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    pub fn from_spec(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
        match spec {
            GroupSpec::Table { table, labels } => {
                if table.len() > cap {
                    return Err(Error::TooLarge(cap));
                }
                FiniteGroup::from_table(table, labels.clone())
            }
            GroupSpec::Permutations { points, gens } => FiniteGroup::from_permutations(*points, gens, cap),
        }
    }

    /// Validates a multiplication table. The identity is moved to index `0`;
    /// all other elements keep their input order.
    pub fn from_table(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Input("empty multiplication table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::Input("multiplication table is not square over 0..n".into()));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Input("label count differs from table size".into()));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Input("table has no identity".into()))?;
        // relabel: identity first, others in input order
        let mut order: Vec<usize> = vec![e];
        order.extend((0..n).filter(|&x| x != e));
        let mut pos = vec![0usize; n];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        let mut flat = vec![0u32; n * n];
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                flat[i * n + j] = pos[table[a][b]] as u32;
            }
        }
        let labels = labels.map(|l| order.iter().map(|&x| l[x].clone()).collect());
        FiniteGroup::from_flat(n, flat, labels, true)
    }

    /// Closure of permutation generators; elements sorted by image tuple.
    pub fn from_permutations(points: usize, gens: &[Vec<Vec<usize>>], cap: usize) -> Result<FiniteGroup> {
        let mut perms: Vec<Vec<u32>> = Vec::new();
        for g in gens {
            perms.push(cycles_to_images(points, g)?);
        }
        let id: Vec<u32> = (0..points as u32).collect();
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        seen.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in &perms {
                let y = compose(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::TooLarge(cap));
                    }
                    frontier.push(y);
                }
            }
        }
        let elems: Vec<Vec<u32>> = seen.into_iter().collect();
        let index: BTreeMap<&Vec<u32>, u32> = elems.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let n = elems.len();
        let mut flat = vec![0u32; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                flat[i * n + j] = index[&compose(a, b)];
            }
        }
        let labels = elems.iter().map(|e| cycle_notation(e)).collect();
        // permutation composition is associative, so skip the triple check
        FiniteGroup::from_flat(n, flat, Some(labels), false)
    }

    fn from_flat(n: usize, table: Vec<u32>, labels: Option<Vec<String>>, check: bool) -> Result<FiniteGroup> {
        for a in 0..n {
            let mut seen = vec![false; n];
            for b in 0..n {
                let x = table[a * n + b] as usize;
                if seen[x] {
                    return Err(Error::Input("multiplication table is not a Latin square".into()));
                }
                seen[x] = true;
            }
        }
        if check {
            let at = |a: usize, b: usize| table[a * n + b] as usize;
            if n <= FULL_ASSOC_CHECK {
                for a in 0..n {
                    for b in 0..n {
                        let ab = at(a, b);
                        for c in 0..n {
                            if at(ab, c) != at(a, at(b, c)) {
                                return Err(Error::NotAssociative(a, b, c));
                            }
                        }
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                for _ in 0..200_000 {
                    let a = (rng.next_u64() % n as u64) as usize;
                    let b = (rng.next_u64() % n as u64) as usize;
                    let c = (rng.next_u64() % n as u64) as usize;
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a * n + b] == 0)
                .ok_or_else(|| Error::Input("element without inverse".into()))? as u32;
        }
        let mut orders = vec![0u32; n];
        for a in 0..n {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * n + a] as usize;
                k += 1;
            }
            orders[a] = k;
        }
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != u32::MAX {
                continue;
            }
            let mut cls = BTreeSet::new();
            for g in 0..n {
                let c = table[table[g * n + x] as usize * n + inverse[g] as usize];
                cls.insert(c);
            }
            let id = classes.len() as u32;
            for &c in &cls {
                class_of[c as usize] = id;
            }
            classes.push(cls.into_iter().collect::<Vec<u32>>());
        }
        Ok(FiniteGroup {
            n,
            table,
            inverse,
            orders,
            classes,
            class_of,
            labels,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn elem_order(&self, a: usize) -> u64 {
        self.orders[a] as u64
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.orders[a] as i64;
        let mut e = k.rem_euclid(o);
        let mut acc = 0;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Left conjugation `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Right conjugation `g^-1 x g`.
    #[inline]
    pub fn conj_inv(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// Commutator `a^-1 b^-1 a b`.
    pub fn comm(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &o| num_integer::lcm(acc, o as u64))
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => alloc::format!("{}", x),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.n
    }

    /// The multiplication table as nested rows.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.mul(a, b)).collect())
            .collect()
    }
}

fn cycles_to_images(points: usize, cycles: &[Vec<usize>]) -> Result<Vec<u32>> {
    let mut img: Vec<u32> = (0..points as u32).collect();
    let mut touched = vec![false; points];
    for c in cycles {
        for &p in c {
            if p == 0 || p > points {
                return Err(Error::Input(alloc::format!("point {} outside 1..{}", p, points)));
            }
            if touched[p - 1] {
                return Err(Error::Input("cycles are not disjoint".into()));
            }
            touched[p - 1] = true;
        }
        for k in 0..c.len() {
            img[c[k] - 1] = (c[(k + 1) % c.len()] - 1) as u32;
        }
    }
    Ok(img)
}

/// Product "first `a`, then `b`" on image tuples.
/// Disjoint cycles (1-based points, fixed points omitted) of a permutation
/// given by 0-based images.
pub fn images_to_cycles(img: &[u32]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; img.len()];
    let mut out = Vec::new();
    for start in 0..img.len() {
        if seen[start] || img[start] as usize == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x + 1);
            x = img[x] as usize;
        }
        out.push(cyc);
    }
    out
}

/// Label such as `(1 2 3 4)(5 6)`; the identity is `()`.
pub fn cycle_notation(img: &[u32]) -> String {
    let cycles = images_to_cycles(img);
    if cycles.is_empty() {
        return "()".into();
    }
    let mut s = String::new();
    for c in cycles {
        s.push('(');
        for (i, p) in c.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&alloc::format!("{}", p));
        }
        s.push(')');
    }
    s
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| b[x as usize]).collect()
}

/// A subgroup, identified by its sorted member list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: Vec<u32>,
    gens: Vec<u32>,
    mask: Vec<u64>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Subgroup) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state)
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Subgroup) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Subgroups compare by order, then by member list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Subgroup) -> Ordering {
        self.members
            .len()
            .cmp(&other.members.len())
            .then_with(|| self.members.cmp(&other.members))
    }
}

impl Subgroup {
    fn from_members(n: usize, mut members: Vec<u32>, gens: Vec<u32>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![0u64; n.div_ceil(64)];
        for &m in &members {
            mask[m as usize / 64] |= 1 << (m % 64);
        }
        Subgroup { members, gens, mask }
    }

    /// Smallest subgroup containing `gens`.
    pub fn closure(g: &FiniteGroup, gens: &[usize]) -> Subgroup {
        let n = g.order();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut members = vec![0u32];
        let gens: Vec<usize> = gens.iter().copied().filter(|&x| x != 0).collect();
        let mut i = 0;
        while i < members.len() {
            let x = members[i] as usize;
            for &s in &gens {
                let y = g.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y as u32);
                }
            }
            i += 1;
        }
        Subgroup::from_members(n, members, gens.iter().map(|&x| x as u32).collect())
    }

    pub fn whole(g: &FiniteGroup) -> Subgroup {
        Subgroup::from_members(g.order(), (0..g.order() as u32).collect(), Vec::new()).with_gens_from(g)
    }

    pub fn trivial(g: &FiniteGroup) -> Subgroup {
        Subgroup::from_members(g.order(), vec![0], Vec::new())
    }

    /// Builds a subgroup from a member set that is already known to be closed.
    pub fn from_closed_set(g: &FiniteGroup, members: Vec<u32>) -> Subgroup {
        Subgroup::from_members(g.order(), members, Vec::new()).with_gens_from(g)
    }

    /// Fills in a small generating set (greedy, in member order).
    fn with_gens_from(mut self, g: &FiniteGroup) -> Subgroup {
        let mut gens = Vec::new();
        let mut span = Subgroup::trivial(g);
        for &m in &self.members {
            if !span.contains(m as usize) {
                gens.push(m as usize);
                span = Subgroup::closure(g, &gens);
                if span.order() == self.order() {
                    break;
                }
            }
        }
        self.gens = gens.into_iter().map(|x| x as u32).collect();
        self
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&m| m as usize)
    }

    pub fn gens(&self) -> Vec<usize> {
        self.gens.iter().map(|&x| x as usize).collect()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x / 64).is_some_and(|w| w >> (x % 64) & 1 == 1)
    }

    /// Position of `x` in the member list.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.members.binary_search(&(x as u32)).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m as usize))
    }

    pub fn index_in(&self, other: &Subgroup) -> usize {
        other.order() / self.order()
    }

    pub fn intersect(&self, g: &FiniteGroup, other: &Subgroup) -> Subgroup {
        let m: Vec<u32> = self
            .members
            .iter()
            .copied()
            .filter(|&x| other.contains(x as usize))
            .collect();
        Subgroup::from_closed_set(g, m)
    }

    pub fn join(&self, g: &FiniteGroup, other: &Subgroup) -> Subgroup {
        let mut gens = self.gens();
        gens.extend(other.gens());
        Subgroup::closure(g, &gens)
    }

    /// True when every element of `by` normalises `self`.
    pub fn is_normalized_by(&self, g: &FiniteGroup, by: &Subgroup) -> bool {
        let gens = if by.gens.is_empty() {
            by.members.clone()
        } else {
            by.gens.clone()
        };
        gens.iter().all(|&h| {
            self.members
                .iter()
                .all(|&x| self.contains(g.conj(h as usize, x as usize)))
        })
    }

    pub fn is_normal(&self, g: &FiniteGroup) -> bool {
        self.is_normalized_by(g, &Subgroup::whole(g))
    }

    /// `g S g^-1`.
    pub fn conjugate(&self, g: &FiniteGroup, x: usize) -> Subgroup {
        let m: Vec<u32> = self.members.iter().map(|&s| g.conj(x, s as usize) as u32).collect();
        let gens: Vec<u32> = self.gens.iter().map(|&s| g.conj(x, s as usize) as u32).collect();
        Subgroup::from_members(g.order(), m, gens)
    }

    /// Normaliser of `self` inside `within`.
    pub fn normalizer_in(&self, g: &FiniteGroup, within: &Subgroup) -> Subgroup {
        let m: Vec<u32> = within
            .members
            .iter()
            .copied()
            .filter(|&x| {
                self.members
                    .iter()
                    .all(|&s| self.contains(g.conj(x as usize, s as usize)))
            })
            .collect();
        Subgroup::from_closed_set(g, m)
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        prime_part(self.order() as u64, p) == self.order() as u64
    }
}

/// Derived subgroup of `h`.
pub fn derived_subgroup(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    let mut comms = BTreeSet::new();
    for a in h.iter() {
        for b in h.iter() {
            comms.insert(g.comm(a, b));
        }
    }
    let v: Vec<usize> = comms.into_iter().collect();
    Subgroup::closure(g, &v).rebuild_gens(g)
}

impl Subgroup {
    fn rebuild_gens(self, g: &FiniteGroup) -> Subgroup {
        Subgroup::from_closed_set(g, self.members)
    }
}

pub fn center(g: &FiniteGroup) -> Subgroup {
    let m: Vec<u32> = (0..g.order())
        .filter(|&z| (0..g.order()).all(|x| g.mul(z, x) == g.mul(x, z)))
        .map(|z| z as u32)
        .collect();
    Subgroup::from_closed_set(g, m)
}

/// The subgroup `h` as a standalone group. Element `i` of the result is
/// `h.members()[i]`.
pub fn subgroup_group(g: &FiniteGroup, h: &Subgroup) -> FiniteGroup {
    let n = h.order();
    let mut flat = vec![0u32; n * n];
    for (i, a) in h.iter().enumerate() {
        for (j, b) in h.iter().enumerate() {
            flat[i * n + j] = h.position(g.mul(a, b)).expect("subgroup closed") as u32;
        }
    }
    let labels = g.labels().map(|l| h.iter().map(|x| l[x].clone()).collect());
    FiniteGroup::from_flat(n, flat, labels, false).expect("subgroup table is a group")
}

/// A quotient group together with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// Image of each ambient element.
    pub proj: Vec<u32>,
    /// Smallest ambient element of each coset.
    pub reps: Vec<u32>,
}

impl Quotient {
    pub fn project(&self, x: usize) -> usize {
        self.proj[x] as usize
    }

    pub fn rep(&self, c: usize) -> usize {
        self.reps[c] as usize
    }

    /// Image of a subgroup containing the kernel.
    pub fn image(&self, s: &Subgroup) -> Subgroup {
        let m: BTreeSet<u32> = s.iter().map(|x| self.proj[x]).collect();
        Subgroup::from_closed_set(&self.group, m.into_iter().collect())
    }

    /// Full preimage of a subgroup of the quotient.
    pub fn preimage(&self, g: &FiniteGroup, s: &Subgroup) -> Subgroup {
        let m: Vec<u32> = (0..g.order())
            .filter(|&x| s.contains(self.project(x)))
            .map(|x| x as u32)
            .collect();
        Subgroup::from_closed_set(g, m)
    }
}

/// `G/N`; cosets are ordered by their smallest element, so the identity coset is `0`.
pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Result<Quotient> {
    if !n.is_normal(g) {
        return Err(Error::NotNormal);
    }
    let mut proj = vec![u32::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if proj[x] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x as u32);
        for m in n.iter() {
            proj[g.mul(x, m)] = c;
        }
    }
    let q = reps.len();
    let mut flat = vec![0u32; q * q];
    for i in 0..q {
        for j in 0..q {
            flat[i * q + j] = proj[g.mul(reps[i] as usize, reps[j] as usize)];
        }
    }
    let group = FiniteGroup::from_flat(q, flat, None, false)?;
    Ok(Quotient { group, proj, reps })
}

/// All subgroups of `h`, sorted by order then member list.
pub fn all_subgroups(g: &FiniteGroup, h: &Subgroup) -> Vec<Subgroup> {
    let mut cyclic: BTreeSet<Subgroup> = BTreeSet::new();
    for x in h.iter() {
        cyclic.insert(Subgroup::closure(g, &[x]));
    }
    let cyclic: Vec<Subgroup> = cyclic.into_iter().collect();
    let mut found: BTreeSet<Subgroup> = cyclic.iter().cloned().collect();
    let mut frontier: Vec<Subgroup> = cyclic.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for c in &cyclic {
                if c.is_subgroup_of(a) {
                    continue;
                }
                let j = a.join(g, c);
                if !found.contains(&j) {
                    found.insert(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    found.into_iter().map(|s| s.rebuild_gens(g)).collect()
}

/// Sylow `q`-subgroup of `L` over `N`: `N <= L_q <= L` with `|L_q : N|` the
/// `q`-part of `|L : N|`. Grown greedily from `N` by the first element (in
/// index order) of `q`-power order modulo the current subgroup inside its
/// normaliser.
pub fn sylow_over(g: &FiniteGroup, n: &Subgroup, l: &Subgroup, q: u64) -> Subgroup {
    let target = n.order() as u64 * prime_part((l.order() / n.order()) as u64, q);
    let mut p = n.clone();
    while (p.order() as u64) < target {
        let norm = p.normalizer_in(g, l);
        let x = norm
            .iter()
            .find(|&x| {
                if p.contains(x) {
                    return false;
                }
                let mut y = x;
                let mut k = 1u64;
                while !p.contains(y) {
                    y = g.mul(y, x);
                    k += 1;
                }
                prime_part(k, q) == k
            })
            .expect("Sylow theory guarantees a q-element in the normaliser quotient");
        let mut gens = p.gens();
        gens.push(x);
        p = Subgroup::closure(g, &gens);
    }
    p.rebuild_gens(g)
}

/// A basis of a finite abelian group: `orders[i]` is the order of `gens[i]`
/// and every element has unique coordinates `coords[x][i] < orders[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianBasis {
    pub gens: Vec<usize>,
    pub orders: Vec<u64>,
    pub coords: Vec<Vec<u64>>,
}

/// Basis of an abelian group by iterated extraction of maximal-order cyclic
/// factors. Lifts are verified by recomputing all coordinates.
pub fn abelian_basis(a: &FiniteGroup) -> Result<AbelianBasis> {
    if !a.is_abelian() {
        return Err(Error::Input("group is not abelian".into()));
    }
    let mut gens: Vec<usize> = Vec::new();
    let mut orders: Vec<u64> = Vec::new();
    let mut span = Subgroup::trivial(a);
    while span.order() < a.order() {
        // order of x modulo span
        let rel_order = |x: usize| {
            let mut y = x;
            let mut k = 1u64;
            while !span.contains(y) {
                y = a.mul(y, x);
                k += 1;
            }
            (k, y)
        };
        let (mut best, mut best_ord, mut best_pow) = (0, 0, 0);
        for x in 0..a.order() {
            let (k, y) = rel_order(x);
            if k > best_ord {
                best = x;
                best_ord = k;
                best_pow = y;
            }
        }
        // adjust the lift so that its order equals its relative order:
        // best^k = prod gens^c, with each c divisible by k
        let c = coords_in(a, &gens, &orders, best_pow)
            .ok_or_else(|| Error::Internal("abelian basis coordinates".into()))?;
        let mut lift = best;
        for (i, &ci) in c.iter().enumerate() {
            if ci % best_ord != 0 {
                return Err(Error::Internal("abelian basis lift".into()));
            }
            lift = a.mul(lift, a.pow(gens[i], -((ci / best_ord) as i64)));
        }
        if a.elem_order(lift) != best_ord {
            return Err(Error::Internal("abelian basis lift order".into()));
        }
        gens.push(lift);
        orders.push(best_ord);
        span = Subgroup::closure(a, &gens);
    }
    let mut coords = vec![Vec::new(); a.order()];
    let total: u64 = orders.iter().product();
    if total != a.order() as u64 {
        return Err(Error::Internal("abelian basis is not a direct decomposition".into()));
    }
    let mut idx = vec![0u64; gens.len()];
    for _ in 0..total {
        let mut x = 0;
        for (i, &k) in idx.iter().enumerate() {
            x = a.mul(x, a.pow(gens[i], k as i64));
        }
        if !coords[x].is_empty() || (gens.is_empty() && x != 0) {
            return Err(Error::Internal("abelian basis is not free".into()));
        }
        coords[x] = idx.clone();
        for i in (0..idx.len()).rev() {
            idx[i] += 1;
            if idx[i] < orders[i] {
                break;
            }
            idx[i] = 0;
        }
    }
    if gens.is_empty() {
        coords[0] = Vec::new();
    }
    Ok(AbelianBasis { gens, orders, coords })
}

fn coords_in(a: &FiniteGroup, gens: &[usize], orders: &[u64], target: usize) -> Option<Vec<u64>> {
    let total: u64 = orders.iter().product();
    let mut idx = vec![0u64; gens.len()];
    for _ in 0..total.max(1) {
        let mut x = 0;
        for (i, &k) in idx.iter().enumerate() {
            x = a.mul(x, a.pow(gens[i], k as i64));
        }
        if x == target {
            return Some(idx);
        }
        for i in (0..idx.len()).rev() {
            idx[i] += 1;
            if idx[i] < orders[i] {
                break;
            }
            idx[i] = 0;
        }
    }
    None
}

/// Derived subgroup, center, classes and abelianisation data.
#[derive(Clone, Debug)]
pub struct StandardSubgroups {
    pub derived: Subgroup,
    pub center: Subgroup,
    pub classes: Vec<Vec<u32>>,
    /// Lifts to `G` of a basis of `G/[G,G]`, with the factor orders.
    pub abelianization: Vec<(usize, u64)>,
}

pub fn standard_subgroups(g: &FiniteGroup) -> Result<StandardSubgroups> {
    let derived = derived_subgroup(g, &Subgroup::whole(g));
    let q = quotient_group(g, &derived)?;
    let basis = abelian_basis(&q.group)?;
    let abelianization = basis
        .gens
        .iter()
        .zip(basis.orders.iter())
        .map(|(&x, &o)| (q.rep(x), o))
        .collect();
    Ok(StandardSubgroups {
        derived,
        center: center(g),
        classes: g.classes().to_vec(),
        abelianization,
    })
}

/// Coset bookkeeping for a transversal of `N` in `G` adapted to
/// `N <= K_p <= L_p`, together with the elements `t_i` attached to `H`.
///
/// Indices are 0-based: `y[0]` is the identity, `y[..u]` lie in `K_p` and
/// `y[..u_prime]` lie in `L_p`.
#[derive(Clone, Debug)]
pub struct TransversalData {
    pub y: Vec<usize>,
    pub u: usize,
    pub u_prime: usize,
    /// `t[i]` for `i < u`, with `y[i] t[i]` in `H`.
    pub t: Vec<usize>,
    /// `y_i^-1 y_j y_i = y_kappa(i,j) d_ij`.
    pub kappa: Vec<Vec<usize>>,
    pub d: Vec<Vec<usize>>,
    /// `y_i y_j = y_gamma(i,j) a_ij`.
    pub gamma: Vec<Vec<usize>>,
    pub a: Vec<Vec<usize>>,
    /// `phi[i][k]` is the position in `N` of `y_i n_k y_i^-1`.
    pub phi: Vec<Vec<usize>>,
    /// Coset index of every element of `G`.
    pub coset: Vec<usize>,
    pub n_members: Vec<usize>,
}

impl TransversalData {
    /// Canonical transversal: smallest element of each coset, ordered as the
    /// cosets inside `K_p`, then those inside `L_p`, then the rest.
    pub fn new(g: &FiniteGroup, n: &Subgroup, kp: &Subgroup, lp: &Subgroup, h: &Subgroup) -> Result<TransversalData> {
        let q = quotient_group(g, n)?;
        let mut reps: Vec<usize> = q.reps.iter().map(|&r| r as usize).collect();
        reps.sort_by_key(|&r| (!kp.contains(r), !lp.contains(r), r));
        TransversalData::with_reps(g, n, kp, lp, h, reps)
    }

    /// Transversal from explicit representatives. The first representative
    /// must lie in `N`; it is replaced by the identity.
    pub fn with_reps(
        g: &FiniteGroup,
        n: &Subgroup,
        kp: &Subgroup,
        lp: &Subgroup,
        h: &Subgroup,
        reps: Vec<usize>,
    ) -> Result<TransversalData> {
        if !n.is_normal(g) {
            return Err(Error::NotNormal);
        }
        if !(n.is_subgroup_of(kp) && kp.is_subgroup_of(lp) && h.is_subgroup_of(kp)) {
            return Err(Error::Input("expected N <= K_p <= L_p and H <= K_p".into()));
        }
        let nh = h.intersect(g, n);
        if h.order() / nh.order() * n.order() != kp.order() {
            return Err(Error::NotComplementSpanning);
        }
        let m = g.order() / n.order();
        if reps.len() != m || !n.contains(reps[0]) {
            return Err(Error::Input("transversal must start in N and cover every coset".into()));
        }
        let mut y = reps;
        y[0] = 0;
        let mut coset = vec![usize::MAX; g.order()];
        for (i, &yi) in y.iter().enumerate() {
            for x in n.iter() {
                let z = g.mul(yi, x);
                if coset[z] != usize::MAX {
                    return Err(Error::Input("representatives share a coset".into()));
                }
                coset[z] = i;
            }
        }
        let u = kp.order() / n.order();
        let u_prime = lp.order() / n.order();
        if !y[..u].iter().all(|&x| kp.contains(x)) || !y[..u_prime].iter().all(|&x| lp.contains(x)) {
            return Err(Error::Input("transversal is not adapted to K_p <= L_p".into()));
        }
        let n_members: Vec<usize> = n.iter().collect();
        let t: Vec<usize> = (0..u)
            .map(|i| {
                n_members
                    .iter()
                    .copied()
                    .find(|&x| h.contains(g.mul(y[i], x)))
                    .ok_or(Error::NotComplementSpanning)
            })
            .collect::<Result<_>>()?;
        let split = |x: usize| -> (usize, usize) {
            let i = coset[x];
            (i, g.mul(g.inv(y[i]), x))
        };
        let mut kappa = vec![vec![0; m]; m];
        let mut d = vec![vec![0; m]; m];
        let mut gamma = vec![vec![0; m]; m];
        let mut a = vec![vec![0; m]; m];
        for i in 0..m {
            for j in 0..m {
                let (k, dd) = split(g.conj_inv(y[i], y[j]));
                kappa[i][j] = k;
                d[i][j] = dd;
                let (c, aa) = split(g.mul(y[i], y[j]));
                gamma[i][j] = c;
                a[i][j] = aa;
            }
        }
        let phi = y
            .iter()
            .map(|&yi| n_members.iter().map(|&x| n.position(g.conj(yi, x)).unwrap()).collect())
            .collect();
        Ok(TransversalData {
            y,
            u,
            u_prime,
            t,
            kappa,
            d,
            gamma,
            a,
            phi,
            coset,
            n_members,
        })
    }

    pub fn m(&self) -> usize {
        self.y.len()
    }

    /// Writes `x = y_i n`, returning `(i, n)`.
    pub fn split(&self, g: &FiniteGroup, x: usize) -> (usize, usize) {
        let i = self.coset[x];
        (i, g.mul(g.inv(self.y[i]), x))
    }

    /// Exhaustive check of the defining identities of all tables.
    pub fn verify(&self, g: &FiniteGroup, n: &Subgroup, h: &Subgroup) -> bool {
        let m = self.m();
        for i in 0..m {
            for j in 0..m {
                let lhs = g.conj_inv(self.y[i], self.y[j]);
                if lhs != g.mul(self.y[self.kappa[i][j]], self.d[i][j]) || !n.contains(self.d[i][j]) {
                    return false;
                }
                if g.mul(self.y[i], self.y[j]) != g.mul(self.y[self.gamma[i][j]], self.a[i][j])
                    || !n.contains(self.a[i][j])
                {
                    return false;
                }
            }
            for (k, &x) in self.n_members.iter().enumerate() {
                if self.n_members[self.phi[i][k]] != g.conj(self.y[i], x) {
                    return false;
                }
            }
        }
        (0..self.u).all(|i| h.contains(g.mul(self.y[i], self.t[i])) && n.contains(self.t[i])) && self.y[0] == 0
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn perm_group(points: usize, gens: &[&[&[usize]]]) -> FiniteGroup {
        let g: Vec<Vec<Vec<usize>>> = gens.iter().map(|c| c.iter().map(|x| x.to_vec()).collect()).collect();
        FiniteGroup::from_permutations(points, &g, DEFAULT_SIZE_CAP).unwrap()
    }

    pub fn s3() -> FiniteGroup {
        perm_group(3, &[&[&[1, 2, 3]], &[&[1, 2]]])
    }

    pub fn q8() -> FiniteGroup {
        perm_group(8, &[&[&[1, 2, 3, 4], &[5, 6, 7, 8]], &[&[1, 5, 3, 7], &[2, 8, 4, 6]]])
    }

    pub fn c4() -> FiniteGroup {
        perm_group(4, &[&[&[1, 2, 3, 4]]])
    }

    /// Brute-force Q8 table from quaternion unit multiplication.
    fn q8_table() -> Vec<Vec<usize>> {
        // elements: (sign, unit) with unit in {1,i,j,k}; index = 4*s + u
        let mul_unit = |a: usize, b: usize| -> (usize, usize) {
            const T: [[(usize, usize); 4]; 4] = [
                [(0, 0), (0, 1), (0, 2), (0, 3)],
                [(0, 1), (1, 0), (0, 3), (1, 2)],
                [(0, 2), (1, 3), (1, 0), (0, 1)],
                [(0, 3), (0, 2), (1, 1), (1, 0)],
            ];
            T[a][b]
        };
        (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (s, u) = mul_unit(x % 4, y % 4);
                        let sign = (x / 4 + y / 4 + s) % 2;
                        4 * sign + u
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn permutation_closure_s3() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.classes().iter().map(|c| c.len()).collect::<Vec<_>>(), vec![1, 3, 2]);
    }

    #[test]
    fn q8_table_order_census() {
        let g = FiniteGroup::from_table(&q8_table(), None).unwrap();
        assert_eq!(g.order(), 8);
        let involutions = (0..8).filter(|&x| g.elem_order(x) == 2).count();
        assert_eq!(involutions, 1);
        assert_eq!(g.classes().len(), 5);
    }

    #[test]
    fn broken_associativity_rejected() {
        // Latin square with identity 0 that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table(&t, None),
            Err(Error::NotAssociative(..))
        ));
        let cap = FiniteGroup::from_permutations(5, &[vec![vec![1, 2, 3, 4, 5]], vec![vec![1, 2]]], 100);
        assert_eq!(cap.unwrap_err(), Error::TooLarge(100));
    }

    #[test]
    fn closures() {
        let g = q8();
        assert_eq!(Subgroup::closure(&g, &[]).order(), 1);
        let minus_one = (0..8).find(|&x| g.elem_order(x) == 2).unwrap();
        let z = Subgroup::closure(&g, &[minus_one]);
        assert_eq!(z, center(&g));
        assert_eq!(z.order(), 2);
        let s = s3();
        let three = (0..6).find(|&x| s.elem_order(x) == 3).unwrap();
        assert_eq!(Subgroup::closure(&s, &[three]).order(), 3);
    }

    #[test]
    fn standard_subgroup_census() {
        let g = q8();
        let st = standard_subgroups(&g).unwrap();
        assert_eq!(st.derived, st.center);
        assert_eq!(st.classes.len(), 5);
        assert_eq!(st.abelianization.iter().map(|x| x.1).collect::<Vec<_>>(), vec![2, 2]);
        let s = standard_subgroups(&s3()).unwrap();
        assert_eq!(s.derived.order(), 3);
        let c = standard_subgroups(&c4()).unwrap();
        assert_eq!(c.derived.order(), 1);
        assert_eq!(c.classes.len(), 4);
        // brute-force commutator census
        let mut comm = BTreeSet::new();
        for a in 0..8 {
            for b in 0..8 {
                comm.insert(g.comm(a, b));
            }
        }
        assert_eq!(comm.len(), 2);
    }

    #[test]
    fn quotients() {
        let g = q8();
        let z = center(&g);
        let q = quotient_group(&g, &z).unwrap();
        assert_eq!(q.group.order(), 4);
        assert!((0..4).all(|x| q.group.mul(x, x) == 0));
        let whole = quotient_group(&g, &Subgroup::whole(&g)).unwrap();
        assert_eq!(whole.group.order(), 1);
        let c = c4();
        let sq = Subgroup::closure(&c, &[c.mul(1, 1)]);
        let cq = quotient_group(
            &c,
            &Subgroup::closure(&c, &[(0..4).find(|&x| c.elem_order(x) == 2).unwrap()]),
        )
        .unwrap();
        assert_eq!(cq.group.order(), 2);
        assert!(sq.order() <= 2);
        let s = s3();
        let t = Subgroup::closure(&s, &[(0..6).find(|&x| s.elem_order(x) == 2).unwrap()]);
        assert_eq!(quotient_group(&s, &t).unwrap_err(), Error::NotNormal);
        // projection is a homomorphism with kernel N
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(q.project(g.mul(a, b)), q.group.mul(q.project(a), q.project(b)));
            }
            assert_eq!(q.project(a) == 0, z.contains(a));
        }
    }

    #[test]
    fn sylow_examples() {
        let s = s3();
        let triv = Subgroup::trivial(&s);
        let whole = Subgroup::whole(&s);
        assert_eq!(sylow_over(&s, &triv, &whole, 3).order(), 3);
        assert_eq!(sylow_over(&s, &triv, &whole, 2).order(), 2);
        assert_eq!(sylow_over(&s, &whole, &whole, 2), whole);
        assert_eq!(sylow_over(&s, &triv, &whole, 5), triv);
    }

    #[test]
    fn subgroups_of_q8() {
        let g = q8();
        let subs = all_subgroups(&g, &Subgroup::whole(&g));
        assert_eq!(
            subs.iter().map(|s| s.order()).collect::<Vec<_>>(),
            vec![1, 2, 4, 4, 4, 8]
        );
        let s = s3();
        assert_eq!(all_subgroups(&s, &Subgroup::whole(&s)).len(), 6);
    }

    #[test]
    fn transversal_tables_q8() {
        let g = q8();
        let z = center(&g);
        let whole = Subgroup::whole(&g);
        // in Q8 every proper subgroup contains the center, so only H = G spans
        let i = (0..8).find(|&x| g.elem_order(x) == 4).unwrap();
        let cyc = Subgroup::closure(&g, &[i]);
        assert_eq!(
            TransversalData::new(&g, &z, &whole, &whole, &cyc).unwrap_err(),
            Error::NotComplementSpanning
        );
        let h = whole.clone();
        let td = TransversalData::new(&g, &z, &whole, &whole, &h).unwrap();
        assert_eq!(td.u, 4);
        assert!(td.verify(&g, &z, &h));
        for i in 0..td.m() {
            assert_eq!(td.kappa[i][0], 0);
            assert_eq!(td.d[i][0], 0);
            assert_eq!(td.gamma[0][i], i);
            assert_eq!(td.a[0][i], 0);
        }
        // H = N with N = G is trivially fine
        let t2 = TransversalData::new(&g, &whole, &whole, &whole, &whole).unwrap();
        assert_eq!(t2.y, vec![0]);
        // HN != K_p
        let bad = TransversalData::new(&g, &z, &whole, &whole, &z);
        assert_eq!(bad.unwrap_err(), Error::NotComplementSpanning);
    }

    #[test]
    fn abelian_basis_c2xc4() {
        let g = perm_group(6, &[&[&[1, 2, 3, 4]], &[&[5, 6]]]);
        let b = abelian_basis(&g).unwrap();
        assert_eq!(b.orders, vec![4, 2]);
        for x in 0..g.order() {
            let mut y = 0;
            for (i, &c) in b.coords[x].iter().enumerate() {
                y = g.mul(y, g.pow(b.gens[i], c as i64));
            }
            assert_eq!(x, y);
        }
    }
}
