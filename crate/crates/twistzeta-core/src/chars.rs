//! Ordinary characters of subgroups of an ambient finite group.
//!
//! A class function on a subgroup `S` is a vector indexed by positions in
//! `S.members()`. Character tables are produced by the Dixon–Burnside
//! class-algebra method, or, for `p`-groups, by inducing linear characters of
//! all subgroups. Both engines sort their output the same way.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cyclo::{is_prime, Cyclotomic, RootOfUnity};
use crate::error::{Error, Result};
use crate::group::{
    abelian_basis, all_subgroups, derived_subgroup, quotient_group, subgroup_group, FiniteGroup, Subgroup,
    TransversalData,
};

/// An irreducible character, valued per member of its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub degree: u64,
    pub values: Vec<Cyclotomic>,
}

/// Irreducible characters of a subgroup, sorted by degree with the trivial
/// character first, then by value vectors.
#[derive(Clone, Debug)]
pub struct CharTable {
    pub domain: Subgroup,
    /// Exponent of the domain; all values lie in `Q(z_exponent)`.
    pub exponent: u64,
    /// Conjugacy classes of the domain as member positions.
    pub classes: Vec<Vec<usize>>,
    pub chars: Vec<Character>,
}

impl CharTable {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// Index of the character with exactly these values.
    pub fn find(&self, values: &[Cyclotomic]) -> Option<usize> {
        self.chars.iter().position(|c| c.values == values)
    }
}

/// A linear character stored as exponents: the value at position `i` is
/// `z_modulus^exps[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearCharacter {
    pub modulus: u64,
    pub exps: Vec<u64>,
}

impl LinearCharacter {
    pub fn trivial(size: usize) -> LinearCharacter {
        LinearCharacter {
            modulus: 1,
            exps: vec![0; size],
        }
    }

    pub fn value(&self, pos: usize) -> RootOfUnity {
        RootOfUnity::new(self.modulus, self.exps[pos])
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e % self.modulus == 0)
    }

    /// Rewrites over the smallest modulus that holds every value.
    pub fn reduced(&self) -> LinearCharacter {
        let m = self.exps.iter().fold(1u64, |acc, &e| {
            num_integer::lcm(acc, RootOfUnity::new(self.modulus, e).order())
        });
        LinearCharacter {
            modulus: m,
            exps: self
                .exps
                .iter()
                .map(|&e| RootOfUnity::new(self.modulus, e).exponent_in(m))
                .collect(),
        }
    }

    pub fn mul(&self, other: &LinearCharacter) -> LinearCharacter {
        let m = num_integer::lcm(self.modulus, other.modulus);
        let (a, b) = (m / self.modulus, m / other.modulus);
        LinearCharacter {
            modulus: m,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&x, &y)| (x * a + y * b) % m)
                .collect(),
        }
        .reduced()
    }

    pub fn inv(&self) -> LinearCharacter {
        LinearCharacter {
            modulus: self.modulus,
            exps: self
                .exps
                .iter()
                .map(|&x| (self.modulus - x % self.modulus) % self.modulus)
                .collect(),
        }
    }

    /// Restriction from `from` to the subgroup `to`.
    pub fn restrict(&self, from: &Subgroup, to: &Subgroup) -> LinearCharacter {
        LinearCharacter {
            modulus: self.modulus,
            exps: to
                .iter()
                .map(|x| self.exps[from.position(x).expect("restriction to a subgroup")])
                .collect(),
        }
        .reduced()
    }

    pub fn to_values(&self) -> Vec<Cyclotomic> {
        self.exps
            .iter()
            .map(|&e| Cyclotomic::root_of_unity(self.modulus, e))
            .collect()
    }

    /// The pointwise `q`-primary part.
    pub fn qpart(&self, q: u64) -> LinearCharacter {
        let m = self.modulus;
        LinearCharacter {
            modulus: m,
            exps: self
                .exps
                .iter()
                .map(|&e| RootOfUnity::new(m, e).qpart(q).exponent_in(m))
                .collect(),
        }
        .reduced()
    }
}

/// All linear characters of `s`, enumerated lexicographically in the
/// exponents attached to a basis of the abelianisation (trivial first).
pub fn linear_characters(g: &FiniteGroup, s: &Subgroup) -> Vec<LinearCharacter> {
    let sg = subgroup_group(g, s);
    let whole = Subgroup::whole(&sg);
    let der = derived_subgroup(&sg, &whole);
    let q = quotient_group(&sg, &der).expect("derived subgroup is normal");
    let basis = abelian_basis(&q.group).expect("abelianisation is abelian");
    let e = basis.orders.iter().fold(1u64, |acc, &o| num_integer::lcm(acc, o));
    let total: u64 = basis.orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut k = vec![0u64; basis.orders.len()];
    for _ in 0..total {
        let exps = (0..sg.order())
            .map(|x| {
                let c = &basis.coords[q.project(x)];
                c.iter()
                    .enumerate()
                    .map(|(i, &ci)| ci * k[i] * (e / basis.orders[i]))
                    .sum::<u64>()
                    % e
            })
            .collect();
        out.push(LinearCharacter { modulus: e, exps }.reduced());
        for i in (0..k.len()).rev() {
            k[i] += 1;
            if k[i] < basis.orders[i] {
                break;
            }
            k[i] = 0;
        }
    }
    out
}

/// `(1/|S|) sum f(x) conj(g(x))` for class functions on the same domain.
pub fn inner_product(f: &[Cyclotomic], h: &[Cyclotomic]) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for (a, b) in f.iter().zip(h) {
        acc = acc.add(&a.mul(&b.conj()));
    }
    acc.div_int(f.len() as i64)
}

/// Inner product evaluated on class representatives.
pub fn inner_product_by_classes(classes: &[Vec<usize>], f: &[Cyclotomic], h: &[Cyclotomic]) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    let mut n = 0i64;
    for c in classes {
        let r = c[0];
        acc = acc.add(&f[r].mul(&h[r].conj()).mul_int(c.len() as i64));
        n += c.len() as i64;
    }
    acc.div_int(n)
}

/// Ordinary induction from `h` to `s` (`h <= s`):
/// `Ind f(x) = (1/|H|) sum_{y in S} f(y x y^-1)`, with `f` zero off `H`.
pub fn induce(g: &FiniteGroup, h: &Subgroup, f: &[Cyclotomic], s: &Subgroup) -> Vec<Cyclotomic> {
    s.iter()
        .map(|x| {
            let mut acc = Cyclotomic::zero();
            for y in s.iter() {
                if let Some(p) = h.position(g.conj(y, x)) {
                    acc = acc.add(&f[p]);
                }
            }
            acc.div_int(h.order() as i64)
        })
        .collect()
}

/// Induction of a linear character, accumulating exponent counts so that no
/// field arithmetic happens inside the sum.
pub fn induce_linear(g: &FiniteGroup, h: &Subgroup, lam: &LinearCharacter, s: &Subgroup) -> Vec<Cyclotomic> {
    let m = lam.modulus as usize;
    let mut counts = vec![0i64; m];
    s.iter()
        .map(|x| {
            counts.iter_mut().for_each(|c| *c = 0);
            for y in s.iter() {
                if let Some(p) = h.position(g.conj(y, x)) {
                    counts[lam.exps[p] as usize % m] += 1;
                }
            }
            Cyclotomic::from_exponent_counts(lam.modulus, &counts).div_int(h.order() as i64)
        })
        .collect()
}

pub fn restrict(s: &Subgroup, f: &[Cyclotomic], h: &Subgroup) -> Vec<Cyclotomic> {
    h.iter()
        .map(|x| f[s.position(x).expect("restriction to a subgroup")].clone())
        .collect()
}

/// `^x f (m) = f(x^-1 m x)` for a class function on a subgroup `n`
/// normalised by `x`.
pub fn conj_character(g: &FiniteGroup, n: &Subgroup, f: &[Cyclotomic], x: usize) -> Vec<Cyclotomic> {
    n.iter()
        .map(|m| f[n.position(g.conj_inv(x, m)).expect("x normalises the domain")].clone())
        .collect()
}

/// Conjugate of a linear character: `^x lam (m) = lam(x^-1 m x)`.
pub fn conj_linear(g: &FiniteGroup, n: &Subgroup, lam: &LinearCharacter, x: usize) -> LinearCharacter {
    LinearCharacter {
        modulus: lam.modulus,
        exps: n
            .iter()
            .map(|m| lam.exps[n.position(g.conj_inv(x, m)).expect("x normalises the domain")])
            .collect(),
    }
}

/// Pointwise product of a class function with a linear character.
pub fn twist_values(f: &[Cyclotomic], lam: &LinearCharacter) -> Vec<Cyclotomic> {
    f.iter()
        .zip(&lam.exps)
        .map(|(v, &e)| v.mul(&Cyclotomic::root_of_unity(lam.modulus, e)))
        .collect()
}

fn classes_as_positions(sg: &FiniteGroup) -> Vec<Vec<usize>> {
    sg.classes()
        .iter()
        .map(|c| c.iter().map(|&x| x as usize).collect())
        .collect()
}

fn sort_chars(chars: &mut [Character], e: u64) {
    let trivial = |c: &Character| c.degree == 1 && c.values.iter().all(|v| v.is_one());
    chars.sort_by(|a, b| {
        a.degree
            .cmp(&b.degree)
            .then_with(|| trivial(b).cmp(&trivial(a)))
            .then_with(|| {
                for (x, y) in a.values.iter().zip(&b.values) {
                    match x.cmp_at(y, e) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    });
}

/// Character table by the engine suited to the domain: the monomial engine
/// for groups of prime-power order, Dixon–Burnside otherwise.
pub fn character_table(g: &FiniteGroup, s: &Subgroup) -> Result<CharTable> {
    let ord = s.order() as u64;
    let prime_power = ord == 1 || crate::cyclo::factorize(ord).len() == 1;
    if prime_power {
        if let Some(t) = monomial_table(g, s) {
            return Ok(t);
        }
    }
    dixon_table(g, s)
}

/// Monomial engine: induce every linear character of every subgroup and keep
/// the irreducible results. Returns `None` when the degrees found do not
/// account for the whole group order.
pub fn monomial_table(g: &FiniteGroup, s: &Subgroup) -> Option<CharTable> {
    let sg = subgroup_group(g, s);
    let classes = classes_as_positions(&sg);
    let e = s.iter().fold(1u64, |acc, x| num_integer::lcm(acc, g.elem_order(x)));
    let mut found: Vec<Character> = Vec::new();
    let mut total = 0u64;
    let mut subs = all_subgroups(g, s);
    // large subgroups give small inductions, so they are tried first
    subs.reverse();
    'outer: for a in &subs {
        for lam in linear_characters(g, a) {
            let vals = induce_linear(g, a, &lam, s);
            let ip = inner_product_by_classes(&classes, &vals, &vals);
            if !ip.is_one() {
                continue;
            }
            let vals: Vec<Cyclotomic> = vals.iter().map(|v| v.rebase(e)).collect();
            if found.iter().any(|c| c.values == vals) {
                continue;
            }
            let degree = (s.order() / a.order()) as u64;
            total += degree * degree;
            found.push(Character { degree, values: vals });
            if total == s.order() as u64 {
                break 'outer;
            }
        }
    }
    if total != s.order() as u64 {
        return None;
    }
    sort_chars(&mut found, e);
    Some(CharTable {
        domain: s.clone(),
        exponent: e,
        classes,
        chars: found,
    })
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, m: u64) -> u64 {
    pow_mod(a, m - 2, m)
}

/// Basis of the nullspace of `rows` (each of length `ncols`) over `F_l`.
fn nullspace_mod(mut rows: Vec<Vec<u64>>, ncols: usize, l: u64) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let iv = inv_mod(rows[r][c], l);
        for x in rows[r].iter_mut() {
            *x = *x * iv % l;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for k in 0..ncols {
                    rows[i][k] = (rows[i][k] + l - f * rows[r][k] % l) % l;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (l - rows[i][f]) % l;
            }
            v
        })
        .collect()
}

/// Smallest prime `l` with `l = 1 mod e` and `l > bound`.
fn splitting_prime(e: u64, bound: u64) -> u64 {
    let mut l = (bound / e + 1) * e + 1;
    while !is_prime(l) {
        l += e;
    }
    l
}

fn primitive_root(l: u64) -> u64 {
    let fs = crate::cyclo::factorize(l - 1);
    (2..l)
        .find(|&a| fs.iter().all(|&(q, _)| pow_mod(a, (l - 1) / q, l) != 1))
        .expect("prime fields have primitive roots")
}

/// Dixon–Burnside: common eigenvectors of the class multiplication matrices
/// over `F_l`, lifted to `Q(z_e)` through eigenvalue multiplicities.
pub fn dixon_table(g: &FiniteGroup, s: &Subgroup) -> Result<CharTable> {
    let sg = subgroup_group(g, s);
    let n = sg.order();
    let classes = classes_as_positions(&sg);
    let r = classes.len();
    let e = sg.exponent();
    let l = splitting_prime(e, 2 * n as u64);
    // cst[i][j][k] = #{x in C_i : x^-1 z_k in C_j}
    let mut cst = vec![vec![vec![0u64; r]; r]; r];
    for (i, ci) in classes.iter().enumerate() {
        for (k, ck) in classes.iter().enumerate() {
            let z = ck[0];
            for &x in ci {
                let y = sg.mul(sg.inv(x), z);
                cst[i][sg.class_of(y)][k] += 1;
            }
        }
    }
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];
    for mi in cst.iter().skip(1) {
        if spaces.iter().all(|sp| sp.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for sp in spaces {
            if sp.len() == 1 {
                next.push(sp);
                continue;
            }
            let d = sp.len();
            // w_b = M_i b
            let w: Vec<Vec<u64>> = sp
                .iter()
                .map(|b| {
                    (0..r)
                        .map(|j| (0..r).map(|k| mi[j][k] * b[k] % l).sum::<u64>() % l)
                        .collect()
                })
                .collect();
            let mut covered = 0;
            for lam in 0..l {
                // rows indexed by coordinate j, columns by basis vector
                let rows: Vec<Vec<u64>> = (0..r)
                    .map(|j| (0..d).map(|b| (w[b][j] + l - lam * sp[b][j] % l) % l).collect())
                    .collect();
                let ns = nullspace_mod(rows, d, l);
                if ns.is_empty() {
                    continue;
                }
                covered += ns.len();
                next.push(
                    ns.iter()
                        .map(|c| {
                            (0..r)
                                .map(|j| (0..d).map(|b| c[b] * sp[b][j] % l).sum::<u64>() % l)
                                .collect()
                        })
                        .collect(),
                );
                if covered == d {
                    break;
                }
            }
            if covered != d {
                return Err(Error::Internal("class algebra did not split".into()));
            }
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(Error::Internal("class algebra eigenvectors are not separated".into()));
    }
    let inv_class: Vec<usize> = classes.iter().map(|c| sg.class_of(sg.inv(c[0]))).collect();
    let z = pow_mod(primitive_root(l), (l - 1) / e, l);
    let zinv = inv_mod(z, l);
    let e_inv = inv_mod(e % l, l);
    let mut chars = Vec::with_capacity(r);
    for sp in spaces {
        let v = &sp[0];
        if v[0] == 0 {
            return Err(Error::Internal("central character vanishes at the identity".into()));
        }
        let iv = inv_mod(v[0], l);
        let omega: Vec<u64> = v.iter().map(|x| x * iv % l).collect();
        let mut sum = 0u64;
        for k in 0..r {
            sum = (sum + omega[k] * omega[inv_class[k]] % l * inv_mod(classes[k].len() as u64, l)) % l;
        }
        let d2 = n as u64 % l * inv_mod(sum, l) % l;
        let degree = (1..=n as u64)
            .take_while(|d| d * d <= n as u64)
            .find(|d| d * d % l == d2)
            .ok_or_else(|| Error::Internal("no integral degree".into()))?;
        let chi_mod: Vec<u64> = (0..r)
            .map(|k| degree % l * omega[k] % l * inv_mod(classes[k].len() as u64, l) % l)
            .collect();
        let mut class_vals = Vec::with_capacity(r);
        for ck in &classes {
            let x = ck[0];
            let mut counts = vec![0i64; e as usize];
            for (t, slot) in counts.iter_mut().enumerate() {
                let mut acc = 0u64;
                let mut xj = 0usize;
                let step = pow_mod(zinv, t as u64, l);
                let mut w = 1u64;
                for _ in 0..e {
                    acc = (acc + chi_mod[sg.class_of(xj)] * w) % l;
                    xj = sg.mul(xj, x);
                    w = w * step % l;
                }
                let m = acc * e_inv % l;
                if m > degree {
                    return Err(Error::Internal("eigenvalue multiplicity out of range".into()));
                }
                *slot = m as i64;
            }
            class_vals.push(Cyclotomic::from_exponent_counts(e, &counts));
        }
        let mut values = vec![Cyclotomic::zero(); n];
        for (k, ck) in classes.iter().enumerate() {
            for &x in ck {
                values[x] = class_vals[k].clone();
            }
        }
        chars.push(Character { degree, values });
    }
    sort_chars(&mut chars, e);
    let t = CharTable {
        domain: s.clone(),
        exponent: e,
        classes,
        chars,
    };
    let total: u64 = t.chars.iter().map(|c| c.degree * c.degree).sum();
    if total != n as u64 {
        return Err(Error::Internal("degrees do not account for the group order".into()));
    }
    Ok(t)
}

/// Irreducibility and the orthogonality relations, checked exactly.
pub fn check_orthogonality(t: &CharTable) -> bool {
    let n = t.domain.order() as u64;
    let k = t.chars.len();
    for a in 0..k {
        for b in 0..k {
            let ip = inner_product_by_classes(&t.classes, &t.chars[a].values, &t.chars[b].values);
            if ip != Cyclotomic::from_int((a == b) as i64) {
                return false;
            }
        }
    }
    // column relation: sum_chi chi(x) conj(chi(y)) = |C_S(x)| [x ~ y]
    for (i, ci) in t.classes.iter().enumerate() {
        for (j, cj) in t.classes.iter().enumerate() {
            let mut acc = Cyclotomic::zero();
            for c in &t.chars {
                acc = acc.add(&c.values[ci[0]].mul(&c.values[cj[0]].conj()));
            }
            let expect = if i == j { (n / ci.len() as u64) as i64 } else { 0 };
            if acc != Cyclotomic::from_int(expect) {
                return false;
            }
        }
    }
    t.chars.iter().map(|c| c.degree * c.degree).sum::<u64>() == n
}

/// `(H, chi)` with `HN = K_p`, `chi` linear on `A = N cap H`, `H`-invariant,
/// and `theta = Ind_A^N chi`.
#[derive(Clone, Debug)]
pub struct MonomialPair {
    pub h: Subgroup,
    /// `N cap H`.
    pub a: Subgroup,
    pub chi: LinearCharacter,
    pub theta: Vec<Cyclotomic>,
}

/// Stabiliser in `within` of the pair `(A, chi)`.
pub fn pair_stabilizer(g: &FiniteGroup, a: &Subgroup, chi: &LinearCharacter, within: &Subgroup) -> Subgroup {
    let m: Vec<u32> = within
        .iter()
        .filter(|&x| {
            a.iter().enumerate().all(|(i, y)| match a.position(g.conj_inv(x, y)) {
                Some(p) => chi.exps[p] == chi.exps[i],
                None => false,
            })
        })
        .map(|x| x as u32)
        .collect();
    Subgroup::from_closed_set(g, m)
}

/// First `(A, chi)` in subgroup order with `Ind_A^N chi = theta` whose
/// stabiliser `H` in `K_p` satisfies `HN = K_p`.
pub fn monomial_pair(g: &FiniteGroup, n: &Subgroup, kp: &Subgroup, theta: &[Cyclotomic]) -> Result<MonomialPair> {
    let deg = theta[0]
        .to_i64()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::Input("theta is not a character".into()))? as usize;
    if !n.order().is_multiple_of(deg) {
        return Err(Error::MonomialSearchExhausted);
    }
    let want = n.order() / deg;
    for a in all_subgroups(g, n).into_iter().filter(|a| a.order() == want) {
        for chi in linear_characters(g, &a) {
            if induce_linear(g, &a, &chi, n) != theta {
                continue;
            }
            let h = pair_stabilizer(g, &a, &chi, kp);
            if h.order() * n.order() == a.order() * kp.order() {
                return Ok(MonomialPair {
                    h,
                    a,
                    chi,
                    theta: theta.to_vec(),
                });
            }
        }
    }
    Err(Error::MonomialSearchExhausted)
}

/// Whether `tau` (a linear character of `N`) extends to some `psi` in
/// `Lin(G)` with `psi(y_i) = sigma[i]` for `i < u`. The remaining values are
/// searched in `W_{p^a}` with `p^a = bound`.
pub fn lin_extension_test(
    g: &FiniteGroup,
    n: &Subgroup,
    td: &TransversalData,
    tau: &LinearCharacter,
    sigma: &[RootOfUnity],
    bound: u64,
) -> bool {
    let m = td.m();
    let u = sigma.len();
    let free = m - u;
    let mut idx = vec![0u64; free];
    let total = bound.checked_pow(free as u32).unwrap_or(u64::MAX);
    let tval = |x: usize| tau.value(n.position(x).expect("element of N"));
    for _ in 0..total {
        let s: Vec<RootOfUnity> = (0..m)
            .map(|i| {
                if i < u {
                    sigma[i]
                } else {
                    RootOfUnity::new(bound, idx[i - u])
                }
            })
            .collect();
        if s[0].is_one() && extension_consistent(g, n, td, &tval, &s) {
            return true;
        }
        for i in (0..free).rev() {
            idx[i] += 1;
            if idx[i] < bound {
                break;
            }
            idx[i] = 0;
        }
    }
    false
}

/// `sigma_gamma(i,j) tau(a_ij phi_j^-1(n) n') = sigma_i sigma_j tau(n) tau(n')`
/// for all `i, j, n, n'`.
fn extension_consistent(
    g: &FiniteGroup,
    n: &Subgroup,
    td: &TransversalData,
    tval: &dyn Fn(usize) -> RootOfUnity,
    s: &[RootOfUnity],
) -> bool {
    let m = td.m();
    for i in 0..m {
        for j in 0..m {
            let yj = td.y[j];
            for x in n.iter() {
                let phi_inv = g.conj_inv(yj, x);
                for x2 in n.iter() {
                    let lhs = s[td.gamma[i][j]].mul(&tval(g.mul(g.mul(td.a[i][j], phi_inv), x2)));
                    let rhs = s[i].mul(&s[j]).mul(&tval(x)).mul(&tval(x2));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests::{c4, perm_group, q8, s3};
    use crate::group::{center, sylow_over};

    fn degrees(t: &CharTable) -> Vec<u64> {
        t.chars.iter().map(|c| c.degree).collect()
    }

    #[test]
    fn s3_table() {
        let g = s3();
        let t = dixon_table(&g, &Subgroup::whole(&g)).unwrap();
        assert_eq!(degrees(&t), vec![1, 1, 2]);
        assert!(check_orthogonality(&t));
        // brute force: the degree-2 character vanishes on transpositions
        let two = &t.chars[2];
        for x in 0..6 {
            let expect = match g.elem_order(x) {
                1 => 2,
                2 => 0,
                _ => -1,
            };
            assert_eq!(two.values[x], Cyclotomic::from_int(expect));
        }
    }

    #[test]
    fn c4_table_is_dual_group() {
        let g = c4();
        let t = character_table(&g, &Subgroup::whole(&g)).unwrap();
        assert_eq!(degrees(&t), vec![1, 1, 1, 1]);
        for c in &t.chars {
            for v in &c.values {
                let r = v.as_root_of_unity().unwrap();
                assert_eq!(4 % r.order(), 0);
            }
        }
    }

    #[test]
    fn q8_engines_agree() {
        let g = q8();
        let w = Subgroup::whole(&g);
        let d = dixon_table(&g, &w).unwrap();
        let m = monomial_table(&g, &w).unwrap();
        assert_eq!(degrees(&d), vec![1, 1, 1, 1, 2]);
        assert_eq!(d.chars, m.chars);
        assert!(check_orthogonality(&d));
    }

    #[test]
    fn a4_dixon() {
        let g = perm_group(4, &[&[&[1, 2, 3]], &[&[1, 2], &[3, 4]]]);
        let t = dixon_table(&g, &Subgroup::whole(&g)).unwrap();
        assert_eq!(degrees(&t), vec![1, 1, 1, 3]);
        assert!(check_orthogonality(&t));
        // A4 is monomial, so both engines run and must agree
        assert_eq!(monomial_table(&g, &Subgroup::whole(&g)).unwrap().chars, t.chars);
    }

    #[test]
    fn linear_character_counts() {
        let g = q8();
        let lin = linear_characters(&g, &Subgroup::whole(&g));
        assert_eq!(lin.len(), 4);
        assert!(lin[0].is_trivial());
        let z = center(&g);
        for l in &lin {
            for x in z.iter() {
                assert!(l.value(x).is_one());
            }
            // multiplicativity by brute force
            for a in 0..8 {
                for b in 0..8 {
                    assert_eq!(l.value(g.mul(a, b)), l.value(a).mul(&l.value(b)));
                }
            }
        }
        assert_eq!(linear_characters(&c4(), &Subgroup::whole(&c4())).len(), 4);
        assert_eq!(linear_characters(&s3(), &Subgroup::whole(&s3())).len(), 2);
    }

    #[test]
    fn induction_from_a3() {
        let g = s3();
        let w = Subgroup::whole(&g);
        let a3 = derived_subgroup(&g, &w);
        let lin = linear_characters(&g, &a3);
        let ind = induce_linear(&g, &a3, &lin[1], &w);
        let t = dixon_table(&g, &w).unwrap();
        assert_eq!(t.find(&ind), Some(2));
        assert_eq!(induce(&g, &a3, &lin[1].to_values(), &w), ind);
        // permutation character of the trivial character
        let triv = induce_linear(&g, &a3, &lin[0], &w);
        assert_eq!(triv[0], Cyclotomic::from_int(2));
        // Frobenius reciprocity against every irreducible
        for c in &t.chars {
            let lhs = inner_product(&ind, &c.values);
            let rhs = inner_product(&lin[1].to_values(), &restrict(&w, &c.values, &a3));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn conjugation_in_q8() {
        let g = q8();
        let w = Subgroup::whole(&g);
        let i = (0..8).find(|&x| g.elem_order(x) == 4).unwrap();
        let c = Subgroup::closure(&g, &[i]);
        let j = (0..8).find(|&x| g.elem_order(x) == 4 && !c.contains(x)).unwrap();
        let lin = linear_characters(&g, &c);
        let faithful = lin.iter().find(|l| l.modulus == 4).unwrap();
        let conj = conj_linear(&g, &c, faithful, j);
        assert_eq!(conj, faithful.inv());
        let vals = faithful.to_values();
        assert_eq!(conj_character(&g, &c, &vals, i), vals);
        // action property ^h(^g f) = ^{hg} f
        let t = character_table(&g, &w).unwrap();
        for ch in &t.chars {
            for a in 0..8 {
                for b in 0..8 {
                    let lhs = conj_character(&g, &w, &conj_character(&g, &w, &ch.values, a), b);
                    assert_eq!(lhs, conj_character(&g, &w, &ch.values, g.mul(b, a)));
                }
            }
        }
    }

    #[test]
    fn monomial_pairs_q8() {
        let g = q8();
        let w = Subgroup::whole(&g);
        let t = character_table(&g, &w).unwrap();
        let mp = monomial_pair(&g, &w, &w, &t.chars[4].values).unwrap();
        assert_eq!(mp.a.order(), 4);
        assert_eq!(mp.chi.modulus, 4);
        assert_eq!(induce_linear(&g, &mp.a, &mp.chi, &w), t.chars[4].values);
        let lin = monomial_pair(&g, &w, &w, &t.chars[1].values).unwrap();
        assert_eq!(lin.h, w);
    }

    #[test]
    fn extension_test_examples() {
        // Q8 over its center: a nontrivial tau never extends
        let g = q8();
        let w = Subgroup::whole(&g);
        let z = center(&g);
        let td = TransversalData::new(&g, &z, &z, &w, &z).unwrap();
        let lz = linear_characters(&g, &z);
        assert!(lin_extension_test(&g, &z, &td, &lz[0], &[RootOfUnity::one()], 4));
        assert!(!lin_extension_test(&g, &z, &td, &lz[1], &[RootOfUnity::one()], 4));
        // C4 over C2: the nontrivial tau extends to a faithful character
        let c = c4();
        let wc = Subgroup::whole(&c);
        let n2 = sylow_over(&c, &Subgroup::trivial(&c), &Subgroup::closure(&c, &[c.mul(1, 1)]), 2);
        let n2 = if n2.order() == 2 {
            n2
        } else {
            Subgroup::closure(&c, &[(0..4).find(|&x| c.elem_order(x) == 2).unwrap()])
        };
        let tdc = TransversalData::new(&c, &n2, &n2, &wc, &n2).unwrap();
        let ln = linear_characters(&c, &n2);
        assert!(lin_extension_test(&c, &n2, &tdc, &ln[1], &[RootOfUnity::one()], 4));
        assert!(!lin_extension_test(&c, &n2, &tdc, &ln[1], &[RootOfUnity::one()], 2));
    }
}
