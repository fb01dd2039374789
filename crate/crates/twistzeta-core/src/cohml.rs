//! Low-degree cohomology.
//!
//! Second cohomology with values in `C^x` is handled through integral
//! homology: `H_2(Q, Z)` is computed from the unnormalised bar complex by
//! Smith reduction, and a 2-cocycle is recorded by its multiplicative values
//! on a fixed set of homology generators.
//!
//! First cohomology with coefficients in functions on a point set modulo a
//! subgroup `Gamma` is decided by linear algebra over `Z/M'` in the exponent
//! lattice. Each prime-power component is reduced by elimination over the
//! local ring `Z/p^k` and the answers are glued by CRT.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::{factorize, mod_inverse, Cyclotomic, RootOfUnity};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A 2-cochain on `q` with nonzero values, `values[x * n + y] = alpha(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle2 {
    pub q: FiniteGroup,
    pub values: Vec<Cyclotomic>,
}

impl Cocycle2 {
    pub fn trivial(q: &FiniteGroup) -> Cocycle2 {
        Cocycle2 {
            q: q.clone(),
            values: vec![Cyclotomic::one(); q.order() * q.order()],
        }
    }

    pub fn at(&self, x: usize, y: usize) -> &Cyclotomic {
        &self.values[x * self.q.order() + y]
    }

    /// `d beta (x, y) = beta(x) beta(y) / beta(xy)`.
    pub fn coboundary(q: &FiniteGroup, beta: &[Cyclotomic]) -> Result<Cocycle2> {
        let n = q.order();
        let mut values = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                values.push(beta[x].mul(&beta[y]).div(&beta[q.mul(x, y)])?);
            }
        }
        Ok(Cocycle2 { q: q.clone(), values })
    }

    pub fn mul(&self, other: &Cocycle2) -> Cocycle2 {
        Cocycle2 {
            q: self.q.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn div(&self, other: &Cocycle2) -> Result<Cocycle2> {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.div(b))
            .collect::<Result<_>>()?;
        Ok(Cocycle2 {
            q: self.q.clone(),
            values,
        })
    }

    /// First triple violating `alpha(x,y) alpha(xy,z) = alpha(y,z) alpha(x,yz)`.
    pub fn failing_triple(&self) -> Option<(usize, usize, usize)> {
        let q = &self.q;
        let n = q.order();
        for x in 0..n {
            for y in 0..n {
                let xy = q.mul(x, y);
                for z in 0..n {
                    let lhs = self.at(x, y).mul(self.at(xy, z));
                    let rhs = self.at(y, z).mul(self.at(x, q.mul(y, z)));
                    if lhs != rhs {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn check(&self) -> bool {
        self.values.iter().all(|v| !v.is_zero()) && self.failing_triple().is_none()
    }

    /// Values as roots of unity, when all of them are.
    pub fn as_torsion(&self) -> Option<Vec<RootOfUnity>> {
        self.values.iter().map(|v| v.as_root_of_unity()).collect()
    }
}

type Mat = Vec<Vec<BigInt>>;

struct Diagonalized {
    diag: Vec<BigInt>,
    left_inv: Option<Mat>,
    right: Option<Mat>,
    right_inv: Option<Mat>,
}

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Diagonalises an integer matrix by unimodular row and column operations,
/// `L A R = diag`. Only the requested transforms are tracked.
fn diagonalize(mut a: Mat, ncols: usize, want_left_inv: bool, want_right: bool) -> Diagonalized {
    let nrows = a.len();
    let mut linv = want_left_inv.then(|| identity(nrows));
    let mut r = want_right.then(|| identity(ncols));
    let mut rinv = want_right.then(|| identity(ncols));
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        swap_rows(&mut a, t, bi, &mut linv);
        swap_cols(&mut a, t, bj, &mut r, &mut rinv);
        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_sub(&mut a, i, t, &q, &mut linv);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, j, t, &q, &mut r, &mut rinv);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest entry of row t / column t to the pivot
            let mut bi = t;
            let mut bj = t;
            for i in t..nrows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[bi][bj].abs() {
                    bi = i;
                    bj = t;
                }
            }
            for j in t..ncols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[bi][bj].abs() {
                    bi = t;
                    bj = j;
                }
            }
            swap_rows(&mut a, t, bi, &mut linv);
            swap_cols(&mut a, t, bj, &mut r, &mut rinv);
        }
        if a[t][t].is_negative() {
            // negate row t
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            if let Some(li) = linv.as_mut() {
                for row in li.iter_mut() {
                    row[t] = -row[t].clone();
                }
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    Diagonalized {
        diag,
        left_inv: linv,
        right: r,
        right_inv: rinv,
    }
}

fn swap_rows(a: &mut Mat, i: usize, j: usize, linv: &mut Option<Mat>) {
    if i == j {
        return;
    }
    a.swap(i, j);
    if let Some(li) = linv.as_mut() {
        for row in li.iter_mut() {
            row.swap(i, j);
        }
    }
}

fn swap_cols(a: &mut Mat, i: usize, j: usize, r: &mut Option<Mat>, rinv: &mut Option<Mat>) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    if let Some(r) = r.as_mut() {
        for row in r.iter_mut() {
            row.swap(i, j);
        }
    }
    if let Some(ri) = rinv.as_mut() {
        ri.swap(i, j);
    }
}

/// `row_i -= q row_t`; the inverse of the left transform gains `col_t += q col_i`.
fn row_sub(a: &mut Mat, i: usize, t: usize, q: &BigInt, linv: &mut Option<Mat>) {
    let (lo, hi) = a.split_at_mut(i.max(t));
    let (ri, rt) = if i > t {
        (&mut hi[0], &lo[t])
    } else {
        (&mut lo[i], &hi[0])
    };
    for (x, y) in ri.iter_mut().zip(rt.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
    if let Some(li) = linv.as_mut() {
        for row in li.iter_mut() {
            let add = q * &row[i];
            row[t] += add;
        }
    }
}

/// `col_j -= q col_t`, tracked in `R`; the inverse gains `row_t += q row_j`.
fn col_sub(a: &mut Mat, j: usize, t: usize, q: &BigInt, r: &mut Option<Mat>, rinv: &mut Option<Mat>) {
    for row in a.iter_mut() {
        if !row[t].is_zero() {
            let sub = q * &row[t];
            row[j] -= sub;
        }
    }
    if let Some(r) = r.as_mut() {
        for row in r.iter_mut() {
            if !row[t].is_zero() {
                let sub = q * &row[t];
                row[j] -= sub;
            }
        }
    }
    if let Some(ri) = rinv.as_mut() {
        let add: Vec<BigInt> = ri[j].iter().map(|x| q * x).collect();
        for (x, y) in ri[t].iter_mut().zip(add) {
            *x += y;
        }
    }
}

/// Generators of `H_2(Q, Z)` as integral 2-chains with their orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2Basis {
    pub n: usize,
    /// Sparse chains: `(x, y, coefficient)` stands for `coefficient [x | y]`.
    pub gens: Vec<Vec<(usize, usize, BigInt)>>,
    pub orders: Vec<BigInt>,
}

/// `H_2(Q, Z)` from the unnormalised bar complex.
pub fn h2_basis(q: &FiniteGroup) -> H2Basis {
    let n = q.order();
    let n2 = n * n;
    // boundary of [x|y] is [y] - [xy] + [x]
    let mut d2: Mat = vec![vec![BigInt::zero(); n2]; n];
    for x in 0..n {
        for y in 0..n {
            let c = x * n + y;
            d2[y][c] += 1;
            d2[q.mul(x, y)][c] -= 1;
            d2[x][c] += 1;
        }
    }
    let dz = diagonalize(d2, n2, false, true);
    let rank = dz.diag.len();
    let v = dz.right.unwrap();
    let vinv = dz.right_inv.unwrap();
    let k = n2 - rank;
    // coordinates of each 3-boundary in the cycle basis (columns rank.. of V)
    let mut coords: Mat = vec![Vec::with_capacity(n * n2); k];
    for x in 0..n {
        for y in 0..n {
            let xy = q.mul(x, y);
            for z in 0..n {
                let yz = q.mul(y, z);
                // [y|z] - [xy|z] + [x|yz] - [x|y]
                let terms = [(y * n + z, 1i64), (xy * n + z, -1), (x * n + yz, 1), (x * n + y, -1)];
                for (row, cv) in coords.iter_mut().enumerate() {
                    let vr = &vinv[rank + row];
                    let mut s = BigInt::zero();
                    for &(c, sign) in &terms {
                        if !vr[c].is_zero() {
                            s += &vr[c] * sign;
                        }
                    }
                    cv.push(s);
                }
            }
        }
    }
    let dc = diagonalize(coords, n * n2, true, false);
    let pinv = dc.left_inv.unwrap();
    let mut gens = Vec::new();
    let mut orders = Vec::new();
    for i in 0..k {
        let d = dc.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_one() {
            continue;
        }
        // chain = sum_r V[:, rank + r] * Pinv[r][i]
        let mut chain = vec![BigInt::zero(); n2];
        for r in 0..k {
            let c = &pinv[r][i];
            if c.is_zero() {
                continue;
            }
            for (e, slot) in chain.iter_mut().enumerate() {
                if !v[e][rank + r].is_zero() {
                    *slot += &v[e][rank + r] * c;
                }
            }
        }
        let mut sparse: Vec<(usize, usize, BigInt)> = chain
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e / n, e % n, c))
            .collect();
        sparse.sort_by_key(|a| (a.0, a.1));
        gens.push(sparse);
        orders.push(d);
    }
    H2Basis { n, gens, orders }
}

/// A cohomology class of 2-cocycles, recorded by its values on the
/// generators of `H_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2ClassCertificate {
    pub n: usize,
    pub gens: Vec<Vec<(usize, usize, BigInt)>>,
    pub evals: Vec<Cyclotomic>,
}

impl H2ClassCertificate {
    pub fn is_trivial(&self) -> bool {
        self.evals.iter().all(|e| e.is_one())
    }
}

/// Multiplicative evaluation of `alpha` on an integral 2-chain.
pub fn evaluate_chain(alpha: &Cocycle2, chain: &[(usize, usize, BigInt)]) -> Result<Cyclotomic> {
    if let Some(t) = alpha.as_torsion() {
        let n = alpha.q.order();
        let mut acc = RootOfUnity::one();
        for (x, y, c) in chain {
            let w = t[x * n + y];
            let e = (c % BigInt::from(w.order())).to_i64().expect("reduced exponent");
            acc = acc.mul(&w.pow(e));
        }
        return Ok(acc.to_cyclotomic());
    }
    let mut acc = Cyclotomic::one();
    for (x, y, c) in chain {
        let e = c
            .to_i64()
            .ok_or_else(|| Error::Internal("chain coefficient too large".into()))?;
        acc = acc.mul(&alpha.at(*x, *y).pow(e)?);
    }
    Ok(acc)
}

pub fn h2_certificate(alpha: &Cocycle2, basis: &H2Basis) -> Result<H2ClassCertificate> {
    let evals = basis
        .gens
        .iter()
        .map(|c| evaluate_chain(alpha, c))
        .collect::<Result<_>>()?;
    Ok(H2ClassCertificate {
        n: basis.n,
        gens: basis.gens.clone(),
        evals,
    })
}

pub fn h2_equal(a: &H2ClassCertificate, b: &H2ClassCertificate) -> Result<bool> {
    if a.n != b.n || a.gens != b.gens {
        return Err(Error::Input("certificates over different base groups".into()));
    }
    Ok(a.evals == b.evals)
}

/// Data of the coefficient module `Func(X, W) / Gamma` over a base group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module1 {
    /// Multiplication of the base group by positions.
    pub base_mul: Vec<Vec<usize>>,
    /// `act[g][x]`: the point `g^-1 x g`.
    pub act: Vec<Vec<usize>>,
    /// All members of `Gamma` as functions on the points.
    pub gamma: Vec<Vec<RootOfUnity>>,
    /// Generators of `Gamma`.
    pub gamma_gens: Vec<Vec<RootOfUnity>>,
}

impl Module1 {
    pub fn base_order(&self) -> usize {
        self.base_mul.len()
    }

    pub fn points(&self) -> usize {
        self.act.first().map_or(0, |r| r.len())
    }

    pub fn in_gamma(&self, f: &[RootOfUnity]) -> bool {
        self.gamma.iter().any(|g| g.as_slice() == f)
    }

    /// Restriction to a subset of base positions closed under products.
    pub fn restrict(&self, sub: &[usize]) -> Module1 {
        let pos = |g: usize| sub.iter().position(|&s| s == g).expect("sub is closed");
        Module1 {
            base_mul: sub
                .iter()
                .map(|&a| sub.iter().map(|&b| pos(self.base_mul[a][b])).collect())
                .collect(),
            act: sub.iter().map(|&a| self.act[a].clone()).collect(),
            gamma: self.gamma.clone(),
            gamma_gens: self.gamma_gens.clone(),
        }
    }
}

/// A 1-cochain `g -> (x -> value)` with root-of-unity values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle1 {
    pub module: Module1,
    pub values: Vec<Vec<RootOfUnity>>,
}

impl Cocycle1 {
    /// Least common multiple of all value orders, including those of `Gamma`.
    pub fn modulus(&self) -> u64 {
        let mut m = 1u64;
        for row in self.values.iter().chain(self.module.gamma.iter()) {
            for w in row {
                m = num_integer::lcm(m, w.order());
            }
        }
        m
    }

    /// Pointwise quotient `self / other`.
    pub fn ratio(&self, other: &Cocycle1) -> Cocycle1 {
        Cocycle1 {
            module: self.module.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.mul(&y.inv())).collect())
                .collect(),
        }
    }
}

/// Crossed-homomorphism identity modulo `Gamma`:
/// `rho(gh) = rho(g) . ^g rho(h)` up to an element of `Gamma`.
pub fn check_cocycle1(c: &Cocycle1) -> bool {
    failing_pair(c).is_none()
}

pub fn failing_pair(c: &Cocycle1) -> Option<(usize, usize)> {
    let m = &c.module;
    let b = m.base_order();
    for g in 0..b {
        for h in 0..b {
            let gh = m.base_mul[g][h];
            let diff: Vec<RootOfUnity> = (0..m.points())
                .map(|x| c.values[gh][x].mul(&c.values[g][x].mul(&c.values[h][m.act[g][x]]).inv()))
                .collect();
            if !m.in_gamma(&diff) {
                return Some((g, h));
            }
        }
    }
    None
}

/// Pointwise `q`-part.
pub fn cocycle_qpart(c: &Cocycle1, q: u64) -> Cocycle1 {
    Cocycle1 {
        module: c.module.clone(),
        values: c
            .values
            .iter()
            .map(|r| r.iter().map(|w| w.qpart(q)).collect())
            .collect(),
    }
}

/// Restriction to the base positions `sub` (a subgroup containing position 0).
pub fn restrict_cocycle(c: &Cocycle1, sub: &[usize]) -> Cocycle1 {
    Cocycle1 {
        module: c.module.restrict(sub),
        values: sub.iter().map(|&g| c.values[g].clone()).collect(),
    }
}

/// A solution of `rho(g)(x) = omega(g^-1 x g) / omega(x) * nu_g(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Witness {
    pub modulus: u64,
    /// Exponents of `omega` in `z_modulus`.
    pub omega: Vec<u64>,
    /// `nu_g = prod_l gamma_gens[l]^coef[g][l]`.
    pub coef: Vec<Vec<u64>>,
}

impl H1Witness {
    /// Substitutes the witness back into the defining equations.
    pub fn reproduces(&self, c: &Cocycle1) -> bool {
        let m = &c.module;
        let mm = self.modulus;
        (0..m.base_order()).all(|g| {
            (0..m.points()).all(|x| {
                let mut w = RootOfUnity::new(mm, self.omega[m.act[g][x]] + mm - self.omega[x] % mm);
                for (l, gl) in m.gamma_gens.iter().enumerate() {
                    w = w.mul(&gl[x].pow(self.coef[g][l] as i64));
                }
                w == c.values[g][x]
            })
        })
    }
}

/// Decides whether `c` is a coboundary modulo `Gamma` with `omega` valued in
/// `W_modulus`. `modulus` must be a multiple of [`Cocycle1::modulus`].
pub fn h1_coboundary_solve(c: &Cocycle1, modulus: u64) -> Option<H1Witness> {
    let m = &c.module;
    let b = m.base_order();
    let pts = m.points();
    let ng = m.gamma_gens.len();
    let unknowns = pts + b * ng;
    let mut rows = Vec::with_capacity(b * pts);
    let mut rhs = Vec::with_capacity(b * pts);
    for g in 0..b {
        for x in 0..pts {
            let mut row = vec![0i64; unknowns];
            row[m.act[g][x]] += 1;
            row[x] -= 1;
            for (l, gl) in m.gamma_gens.iter().enumerate() {
                row[pts + g * ng + l] += gl[x].exponent_in(modulus) as i64;
            }
            rows.push(row);
            rhs.push(c.values[g][x].exponent_in(modulus) as i64);
        }
    }
    let sol = solve_mod(&rows, &rhs, unknowns, modulus)?;
    let w = H1Witness {
        modulus,
        omega: sol[..pts].to_vec(),
        coef: (0..b).map(|g| sol[pts + g * ng..pts + (g + 1) * ng].to_vec()).collect(),
    };
    debug_assert!(w.reproduces(c));
    Some(w)
}

/// Exhaustive search over all `omega: X -> W_modulus`; for each base element
/// the remaining discrepancy must lie in `Gamma`.
pub fn h1_coboundary_brute(c: &Cocycle1, modulus: u64) -> bool {
    let m = &c.module;
    let pts = m.points();
    let total = modulus.checked_pow(pts as u32).expect("search space fits in u64");
    let mut omega = vec![0u64; pts];
    for _ in 0..total {
        let ok = (0..m.base_order()).all(|g| {
            let diff: Vec<RootOfUnity> = (0..pts)
                .map(|x| {
                    let cob = RootOfUnity::new(modulus, omega[m.act[g][x]] + modulus - omega[x]);
                    c.values[g][x].mul(&cob.inv())
                })
                .collect();
            m.in_gamma(&diff)
        });
        if ok {
            return true;
        }
        for i in 0..pts {
            omega[i] += 1;
            if omega[i] < modulus {
                break;
            }
            omega[i] = 0;
        }
    }
    false
}

/// Gauge-fixes a cyclotomic-valued cochain to a torsion one: returns the
/// torsion cochain `rho(g) = mu(g) . w / ^g w` together with `w`, or `None`
/// when some residual value is not a root of unity.
pub fn gauge_fix(module: &Module1, mu: &[Vec<Cyclotomic>]) -> Result<Option<(Cocycle1, Vec<Cyclotomic>)>> {
    let pts = module.points();
    let b = module.base_order();
    let mut w: Vec<Option<Cyclotomic>> = vec![None; pts];
    for x0 in 0..pts {
        if w[x0].is_some() {
            continue;
        }
        w[x0] = Some(Cyclotomic::one());
        for g in 0..b {
            // the point g^-1 x0 g
            let y = module.act[g][x0];
            if w[y].is_none() {
                w[y] = Some(mu[g][x0].clone());
            }
        }
    }
    let w: Vec<Cyclotomic> = w
        .into_iter()
        .map(|v| v.expect("every point lies in an orbit"))
        .collect();
    let mut values = Vec::with_capacity(b);
    for g in 0..b {
        let mut row = Vec::with_capacity(pts);
        for x in 0..pts {
            let v = mu[g][x].mul(&w[x]).div(&w[module.act[g][x]])?;
            match v.as_root_of_unity() {
                Some(r) => row.push(r),
                None => return Ok(None),
            }
        }
        values.push(row);
    }
    Ok(Some((
        Cocycle1 {
            module: module.clone(),
            values,
        },
        w,
    )))
}

/// Solves `A y = b` over `Z/modulus`, `A` given by rows of length `ncols`.
pub fn solve_mod(rows: &[Vec<i64>], rhs: &[i64], ncols: usize, modulus: u64) -> Option<Vec<u64>> {
    if modulus == 1 {
        return Some(vec![0; ncols]);
    }
    let mut acc = vec![0u64; ncols];
    let mut acc_mod = 1u64;
    for (p, k) in factorize(modulus) {
        let q = p.pow(k);
        let part = solve_prime_power(rows, rhs, ncols, p, q)?;
        // CRT merge of acc (mod acc_mod) with part (mod q)
        let inv = mod_inverse(acc_mod % q, q).expect("coprime moduli");
        for (a, &s) in acc.iter_mut().zip(&part) {
            let t = ((s + q - *a % q) % q) as u128 * inv as u128 % q as u128;
            *a = (*a as u128 + acc_mod as u128 * t) as u64;
        }
        acc_mod *= q;
    }
    Some(acc)
}

fn valuation(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p) && x != 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Elimination over the local ring `Z/q`, `q = p^k`: pivots of least
/// valuation, column operations recorded to recover the solution.
fn solve_prime_power(rows: &[Vec<i64>], rhs: &[i64], ncols: usize, p: u64, q: u64) -> Option<Vec<u64>> {
    let red = |x: i64| x.rem_euclid(q as i64) as u64;
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| red(x)).collect()).collect();
    let mut b: Vec<u64> = rhs.iter().map(|&x| red(x)).collect();
    let nrows = a.len();
    let mut cols = vec![vec![0u64; ncols]; ncols];
    for (i, c) in cols.iter_mut().enumerate() {
        c[i] = 1;
    }
    let mulq = |x: u64, y: u64| (x as u128 * y as u128 % q as u128) as u64;
    let mut pivots: Vec<u32> = Vec::new();
    for t in 0..nrows.min(ncols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = valuation(x, p);
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        a.swap(t, bi);
        b.swap(t, bi);
        if bj != t {
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in cols.iter_mut() {
                row.swap(t, bj);
            }
        }
        let pv = p.pow(v);
        let unit = a[t][t] / pv;
        let uinv = mod_inverse(unit % q, q).expect("unit part is invertible");
        for x in a[t].iter_mut() {
            *x = mulq(*x, uinv);
        }
        b[t] = mulq(b[t], uinv);
        for i in t + 1..nrows {
            if a[i][t] == 0 {
                continue;
            }
            let f = a[i][t] / pv;
            for j in t..ncols {
                let s = mulq(f, a[t][j]);
                a[i][j] = (a[i][j] + q - s) % q;
            }
            b[i] = (b[i] + q - mulq(f, b[t])) % q;
        }
        for j in t + 1..ncols {
            if a[t][j] == 0 {
                continue;
            }
            let f = a[t][j] / pv;
            for row in a.iter_mut() {
                let s = mulq(f, row[t]);
                row[j] = (row[j] + q - s) % q;
            }
            for row in cols.iter_mut() {
                let s = mulq(f, row[t]);
                row[j] = (row[j] + q - s) % q;
            }
        }
        pivots.push(v);
    }
    let r = pivots.len();
    if b[r..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut z = vec![0u64; ncols];
    for (i, &v) in pivots.iter().enumerate() {
        let pv = p.pow(v);
        if !b[i].is_multiple_of(pv) {
            return None;
        }
        z[i] = b[i] / pv;
    }
    Some(
        (0..ncols)
            .map(|i| (0..ncols).fold(0u64, |s, j| (s + mulq(cols[i][j], z[j])) % q))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests::{c4, perm_group};
    use proptest::prelude::*;

    fn v4() -> FiniteGroup {
        perm_group(4, &[&[&[1, 2]], &[&[3, 4]]])
    }

    /// The factor set of the quaternion projective representation of V4:
    /// `P(a) = i`, `P(b) = j` style signs.
    fn v4_sign_cocycle(q: &FiniteGroup) -> Cocycle2 {
        // coordinates of each element in F_2^2 by brute force
        let a = 1;
        let b = (1..4).find(|&x| x != a && q.mul(a, x) != 0).unwrap();
        let coord = |x: usize| -> (u32, u32) {
            for i in 0..2 {
                for j in 0..2 {
                    let y = q.mul(q.pow(a, i as i64), q.pow(b, j as i64));
                    if y == x {
                        return (i, j);
                    }
                }
            }
            unreachable!()
        };
        let n = q.order();
        let mut values = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let (_, x2) = coord(x);
                let (y1, _) = coord(y);
                values.push(Cyclotomic::from_int(if x2 * y1 == 1 { -1 } else { 1 }));
            }
        }
        Cocycle2 { q: q.clone(), values }
    }

    #[test]
    fn cyclic_has_trivial_multiplier() {
        let q = c4();
        let b = h2_basis(&q);
        assert!(b.gens.is_empty());
    }

    #[test]
    fn klein_multiplier_and_sign_class() {
        let q = v4();
        let b = h2_basis(&q);
        assert_eq!(b.orders, vec![BigInt::from(2)]);
        let alpha = v4_sign_cocycle(&q);
        assert!(alpha.check());
        let cert = h2_certificate(&alpha, &b).unwrap();
        assert_eq!(cert.evals, vec![Cyclotomic::from_int(-1)]);
        let triv = h2_certificate(&Cocycle2::trivial(&q), &b).unwrap();
        assert!(!h2_equal(&cert, &triv).unwrap());
        assert!(h2_equal(&cert, &cert).unwrap());
    }

    #[test]
    fn perturbed_cocycle_fails() {
        let q = v4();
        let mut alpha = Cocycle2::trivial(&q);
        alpha.values[5] = Cyclotomic::from_int(-1);
        assert!(!alpha.check());
        assert!(alpha.failing_triple().is_some());
    }

    #[test]
    fn coboundaries_evaluate_to_one() {
        let q = v4();
        let b = h2_basis(&q);
        let beta: Vec<Cyclotomic> = (0..4).map(|i| Cyclotomic::root_of_unity(6, i as u64 + 1)).collect();
        let db = Cocycle2::coboundary(&q, &beta).unwrap();
        assert!(db.check());
        assert!(h2_certificate(&db, &b).unwrap().is_trivial());
        // non-torsion coboundary
        let beta2: Vec<Cyclotomic> = (0..4).map(|i| Cyclotomic::from_int(i as i64 + 2)).collect();
        let db2 = Cocycle2::coboundary(&q, &beta2).unwrap();
        assert!(h2_certificate(&db2, &b).unwrap().is_trivial());
    }

    fn trivial_module_c2_on_c2() -> Module1 {
        // base C2 acting trivially on two points
        Module1 {
            base_mul: vec![vec![0, 1], vec![1, 0]],
            act: vec![vec![0, 1], vec![0, 1]],
            gamma: vec![vec![RootOfUnity::one(); 2]],
            gamma_gens: vec![],
        }
    }

    #[test]
    fn solver_examples() {
        let m = trivial_module_c2_on_c2();
        let one = Cocycle1 {
            module: m.clone(),
            values: vec![vec![RootOfUnity::one(); 2]; 2],
        };
        assert!(check_cocycle1(&one));
        let w = h1_coboundary_solve(&one, 2).unwrap();
        assert!(w.reproduces(&one));
        // a homomorphism C2 -> W with trivial action is not a coboundary
        let minus = RootOfUnity::new(2, 1);
        let hom = Cocycle1 {
            module: m,
            values: vec![vec![RootOfUnity::one(); 2], vec![minus; 2]],
        };
        assert!(check_cocycle1(&hom));
        assert!(h1_coboundary_solve(&hom, 4).is_none());
        assert!(!h1_coboundary_brute(&hom, 4));
    }

    #[test]
    fn solve_mod_handles_zero_divisors() {
        // 2y = 2 mod 4 has solutions; 2y = 1 mod 4 has none
        assert!(solve_mod(&[vec![2]], &[2], 1, 4).is_some());
        assert!(solve_mod(&[vec![2]], &[1], 1, 4).is_none());
        // 6y = 3 mod 12 is unsolvable, 6y = 6 mod 12 solvable
        assert!(solve_mod(&[vec![6]], &[3], 1, 12).is_none());
        let y = solve_mod(&[vec![6]], &[6], 1, 12).unwrap();
        assert_eq!(6 * y[0] % 12, 6);
    }

    /// C3 permuting three points cyclically with `Gamma` trivial.
    fn c3_regular() -> Module1 {
        let mul: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        // g^-1 x g on an abelian group is trivial; use a regular permutation action instead
        let act: Vec<Vec<usize>> = (0..3).map(|g| (0..3).map(|x| (x + g) % 3).collect()).collect();
        Module1 {
            base_mul: mul,
            act,
            gamma: vec![vec![RootOfUnity::one(); 3]],
            gamma_gens: vec![],
        }
    }

    proptest! {
        #[test]
        fn planted_coboundaries_recovered(om in proptest::collection::vec(0u64..4, 3)) {
            let m = c3_regular();
            let values: Vec<Vec<RootOfUnity>> = (0..3)
                .map(|g| (0..3).map(|x| RootOfUnity::new(4, om[m.act[g][x]] + 4 - om[x])).collect())
                .collect();
            let c = Cocycle1 { module: m, values };
            prop_assert!(check_cocycle1(&c));
            let w = h1_coboundary_solve(&c, 4).unwrap();
            prop_assert!(w.reproduces(&c));
            prop_assert!(h1_coboundary_brute(&c, 4));
            // restriction to the trivial subgroup stays a coboundary
            prop_assert!(h1_coboundary_solve(&restrict_cocycle(&c, &[0]), 4).is_some());
        }

        #[test]
        fn solver_matches_brute_force(vals in proptest::collection::vec(0u64..2, 9)) {
            let m = c3_regular();
            let values: Vec<Vec<RootOfUnity>> =
                (0..3).map(|g| (0..3).map(|x| RootOfUnity::new(2, vals[3 * g + x])).collect()).collect();
            let c = Cocycle1 { module: m, values };
            prop_assert_eq!(h1_coboundary_solve(&c, 2).is_some(), h1_coboundary_brute(&c, 2));
        }

        #[test]
        fn qparts_recompose(vals in proptest::collection::vec(0u64..12, 9)) {
            let m = c3_regular();
            let values: Vec<Vec<RootOfUnity>> =
                (0..3).map(|g| (0..3).map(|x| RootOfUnity::new(12, vals[3 * g + x])).collect()).collect();
            let c = Cocycle1 { module: m, values };
            let a = cocycle_qpart(&c, 2);
            let b = cocycle_qpart(&c, 3);
            for g in 0..3 {
                for x in 0..3 {
                    prop_assert_eq!(a.values[g][x].mul(&b.values[g][x]), c.values[g][x]);
                }
            }
            prop_assert!(cocycle_qpart(&c, 5).values.iter().flatten().all(|w| w.is_one()));
        }
    }

    #[test]
    fn gauge_fixing_removes_scalars() {
        let m = c3_regular();
        // coboundary of a non-torsion function times a torsion coboundary
        let w0: Vec<Cyclotomic> = (0..3).map(|i| Cyclotomic::from_int(i as i64 + 2)).collect();
        let mu: Vec<Vec<Cyclotomic>> = (0..3)
            .map(|g| (0..3).map(|x| w0[m.act[g][x]].div(&w0[x]).unwrap()).collect())
            .collect();
        let (rho, _) = gauge_fix(&m, &mu).unwrap().unwrap();
        assert!(rho.values.iter().flatten().all(|w| w.is_one()));
    }
}
