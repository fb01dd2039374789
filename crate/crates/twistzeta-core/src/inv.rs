//! Strong extensions, factor sets and the invariants `C` and `T` of a twist
//! class of `Irr(N)`.
//!
//! For a class with representative `theta`, `K = Stab_G(theta)` and
//! `L = Stab_G(twist class)`. Sylow data `K_p <= L_p` over `N` and a monomial
//! pair `(H, chi)` for `theta` give an explicit strong extension on `K_p`
//! (the monomial route). An intertwiner construction on any `K <= K_theta`
//! gives a second one (the matrix route).
//!
//! Quotients by `N` live in `Gbar = G/N`; a subgroup `S >= N` is handled
//! through its image `Sbar`, whose member positions index cosets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::chars::{character_table, linear_characters, monomial_pair, CharTable, LinearCharacter, MonomialPair};
use crate::cohml::{
    check_cocycle1, gauge_fix, h1_coboundary_solve, h2_basis, h2_certificate, h2_equal, solve_mod, Cocycle1, Cocycle2,
    H2Basis, H2ClassCertificate, Module1,
};
use crate::cyclo::{is_prime, prime_part, Cyclotomic, RootOfUnity};
use crate::error::{Error, Result};
use crate::group::{quotient_group, subgroup_group, sylow_over, FiniteGroup, Quotient, Subgroup, TransversalData};
use crate::twist::{
    gamma_group, psi_for, psi_for_last, restrict_all, stabilizers, twist_classes, GammaGroup, TwistClass,
};

/// Everything fixed by the triple `(G, N, p)`.
#[derive(Clone, Debug)]
pub struct Context {
    pub g: FiniteGroup,
    pub n: Subgroup,
    pub p: u64,
    pub headroom: u32,
    pub lin_g: Vec<LinearCharacter>,
    /// `Lin(G)` restricted to `N`.
    pub res_n: Vec<LinearCharacter>,
    pub table_n: CharTable,
    pub classes_n: Vec<TwistClass>,
    pub gbar: Quotient,
}

impl Context {
    pub fn new(g: FiniteGroup, n: Subgroup, p: u64, headroom: u32) -> Result<Context> {
        if !is_prime(p) {
            return Err(Error::Input(alloc::format!("{} is not prime", p)));
        }
        if headroom == 0 {
            return Err(Error::Input("headroom must be at least 1".into()));
        }
        if !n.is_normal(&g) {
            return Err(Error::NotNormal);
        }
        if !n.is_p_group(p) {
            return Err(Error::NotPGroup(p));
        }
        let whole = Subgroup::whole(&g);
        let lin_g = linear_characters(&g, &whole);
        let res_n = restrict_all(&g, &lin_g, &n);
        let table_n = character_table(&g, &n)?;
        let classes_n = twist_classes(&g, &table_n, &lin_g);
        let gbar = quotient_group(&g, &n)?;
        Ok(Context {
            g,
            n,
            p,
            headroom,
            lin_g,
            res_n,
            table_n,
            classes_n,
            gbar,
        })
    }

    pub fn bar(&self, s: &Subgroup) -> Subgroup {
        self.gbar.image(s)
    }

    /// Position in `sbar` of the coset of `x`.
    pub fn point_of(&self, sbar: &Subgroup, x: usize) -> usize {
        sbar.position(self.gbar.project(x)).expect("element lies over sbar")
    }

    /// Smallest element of the coset at position `pos` of `sbar`.
    pub fn rep_of(&self, sbar: &Subgroup, pos: usize) -> usize {
        self.gbar.rep(sbar.members()[pos] as usize)
    }

    pub fn qgroup(&self, sbar: &Subgroup) -> FiniteGroup {
        subgroup_group(&self.gbar.group, sbar)
    }

    /// `|S : N|`.
    pub fn index(&self, s: &Subgroup) -> usize {
        s.order() / self.n.order()
    }
}

/// Homology bases keyed by the member list of `K_p/N` inside `Gbar`.
pub type BasisCache = BTreeMap<Vec<u32>, H2Basis>;

pub fn basis_for(ctx: &Context, kbar: &Subgroup, cache: &BasisCache) -> H2Basis {
    match cache.get(kbar.members()) {
        Some(b) => b.clone(),
        None => h2_basis(&ctx.qgroup(kbar)),
    }
}

/// Which construction produced a strong extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Monomial,
    Matrix,
}

/// A projective character of `K` restricting to `theta` on `N`, with its
/// factor set descended to `K/N` (positions of `kbar`).
#[derive(Clone, Debug)]
pub struct ProjectiveCharacter {
    pub route: Route,
    pub k: Subgroup,
    pub kbar: Subgroup,
    pub values: Vec<Cyclotomic>,
    pub alpha: Cocycle2,
}

impl ProjectiveCharacter {
    pub fn at(&self, x: usize) -> &Cyclotomic {
        &self.values[self.k.position(x).expect("argument in K")]
    }

    /// Positions of `K` where the value is nonzero.
    pub fn support(&self) -> Vec<bool> {
        self.values.iter().map(|v| !v.is_zero()).collect()
    }

    /// Restriction to `N` is `theta`, the factor set is a cocycle and every
    /// coset meets the support.
    pub fn check(&self, ctx: &Context, theta: &[Cyclotomic]) -> bool {
        let restr_ok = ctx.n.iter().zip(theta).all(|(x, t)| self.at(x) == t);
        let cosets_ok = (0..self.kbar.order()).all(|c| {
            let r = ctx.rep_of(&self.kbar, c);
            ctx.n.iter().any(|m| !self.at(ctx.g.mul(r, m)).is_zero())
        });
        restr_ok && cosets_ok && self.alpha.check()
    }
}

/// A left transversal of `a` in `n`: the first member of each coset `rA`.
pub fn left_transversal(g: &FiniteGroup, n: &Subgroup, a: &Subgroup) -> Vec<usize> {
    let mut covered = BTreeSet::new();
    let mut out = Vec::new();
    for r in n.iter() {
        if covered.contains(&r) {
            continue;
        }
        out.push(r);
        for x in a.iter() {
            covered.insert(g.mul(r, x));
        }
    }
    out
}

/// `chi_hat(y_i t_i m) = chi(m)` on `H`, as roots of unity per element of `G`
/// (`None` off `H`).
fn chi_hat_table(ctx: &Context, pair: &MonomialPair, td: &TransversalData) -> Vec<Option<RootOfUnity>> {
    let g = &ctx.g;
    let mut out = vec![None; g.order()];
    for h in pair.h.iter() {
        let i = td.coset[h];
        let base = g.mul(td.y[i], td.t[i]);
        let m = g.mul(g.inv(base), h);
        let pos = pair.a.position(m).expect("y_i t_i normalises the coset inside H");
        out[h] = Some(pair.chi.value(pos));
    }
    out
}

/// The monomial strong extension on `K_p`: projective induction of
/// `chi_hat` along a transversal of `H` chosen inside `N`.
pub fn strong_extension_monomial(
    ctx: &Context,
    pair: &MonomialPair,
    td: &TransversalData,
    kp: &Subgroup,
) -> Result<ProjectiveCharacter> {
    let g = &ctx.g;
    let chat = chi_hat_table(ctx, pair, td);
    let tr = left_transversal(g, &ctx.n, &pair.a);
    let m = pair.chi.modulus.max(1);
    let mut values = Vec::with_capacity(kp.order());
    let mut counts = vec![0i64; m as usize];
    for x in kp.iter() {
        counts.iter_mut().for_each(|c| *c = 0);
        for &r in &tr {
            if let Some(w) = chat[g.conj_inv(r, x)] {
                counts[w.exponent_in(m) as usize] += 1;
            }
        }
        values.push(Cyclotomic::from_exponent_counts(m, &counts));
    }
    let kbar = ctx.bar(kp);
    let q = ctx.qgroup(&kbar);
    // an element of H over each coset
    let mut h_over = vec![usize::MAX; kbar.order()];
    for i in 0..td.u {
        h_over[ctx.point_of(&kbar, td.y[i])] = g.mul(td.y[i], td.t[i]);
    }
    let nq = q.order();
    let mut alpha = Vec::with_capacity(nq * nq);
    for a in 0..nq {
        for b in 0..nq {
            let w = chat[g.mul(h_over[a], h_over[b])].ok_or_else(|| Error::Internal("H not closed".into()))?;
            alpha.push(w.inv().to_cyclotomic());
        }
    }
    let out = ProjectiveCharacter {
        route: Route::Monomial,
        k: kp.clone(),
        kbar,
        values,
        alpha: Cocycle2 { q, values: alpha },
    };
    if !out.check(ctx, &pair.theta) {
        return Err(Error::Internal(
            "monomial strong extension failed its invariants".into(),
        ));
    }
    Ok(out)
}

type CMat = Vec<Vec<Cyclotomic>>;

fn mat_mul(a: &CMat, b: &CMat) -> CMat {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut s = Cyclotomic::zero();
                    for (k, bk) in b.iter().enumerate() {
                        if !a[i][k].is_zero() && !bk[j].is_zero() {
                            s = s.add(&a[i][k].mul(&bk[j]));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn trace(a: &CMat) -> Cyclotomic {
    let mut s = Cyclotomic::zero();
    for (i, row) in a.iter().enumerate() {
        s = s.add(&row[i]);
    }
    s
}

/// Nullspace basis over the cyclotomic field.
fn nullspace(mut rows: Vec<Vec<Cyclotomic>>, ncols: usize) -> Result<Vec<Vec<Cyclotomic>>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let iv = rows[r][c].inv()?;
        for x in rows[r].iter_mut() {
            *x = x.mul(&iv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..ncols {
                    if !rows[r][k].is_zero() {
                        rows[i][k] = rows[i][k].sub(&f.mul(&rows[r][k]));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    Ok((0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Cyclotomic::zero(); ncols];
            v[f] = Cyclotomic::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = rows[i][f].neg();
            }
            v
        })
        .collect())
}

/// Monomial matrix model `Theta(n)_{a,b} = chi(r_a^-1 n r_b)` of
/// `theta = Ind_A^N chi`, indexed by positions of `N`.
pub fn theta_matrices(ctx: &Context, pair: &MonomialPair) -> Vec<CMat> {
    let g = &ctx.g;
    let tr = left_transversal(g, &ctx.n, &pair.a);
    let d = tr.len();
    ctx.n
        .iter()
        .map(|x| {
            (0..d)
                .map(|a| {
                    (0..d)
                        .map(|b| {
                            let z = g.mul(g.mul(g.inv(tr[a]), x), tr[b]);
                            match pair.a.position(z) {
                                Some(p) => pair.chi.value(p).to_cyclotomic(),
                                None => Cyclotomic::zero(),
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// The matrix strong extension on `K`: intertwiners `P_y` with
/// `P_y Theta(y^-1 x y) = Theta(x) P_y`, first nonzero entry scaled to one,
/// and `Pi(y n) = P_y Theta(n)`.
pub fn strong_extension_matrix(ctx: &Context, pair: &MonomialPair, k: &Subgroup) -> Result<ProjectiveCharacter> {
    let g = &ctx.g;
    let n = &ctx.n;
    let thetas = theta_matrices(ctx, pair);
    let d = thetas[0].len();
    let th = |x: usize| &thetas[n.position(x).expect("element of N")];
    let kbar = ctx.bar(k);
    let q = ctx.qgroup(&kbar);
    let reps: Vec<usize> = (0..kbar.order()).map(|a| ctx.rep_of(&kbar, a)).collect();
    let gens = n.gens();
    let mut ps: Vec<CMat> = Vec::with_capacity(reps.len());
    for &y in &reps {
        if y == 0 {
            ps.push(
                (0..d)
                    .map(|i| (0..d).map(|j| Cyclotomic::from_int((i == j) as i64)).collect())
                    .collect(),
            );
            continue;
        }
        let mut rows = Vec::new();
        for &x in &gens {
            let tx = th(x);
            let ty = th(g.conj_inv(y, x));
            for a in 0..d {
                for c in 0..d {
                    let mut row = vec![Cyclotomic::zero(); d * d];
                    for b in 0..d {
                        row[a * d + b] = row[a * d + b].add(&ty[b][c]);
                        row[b * d + c] = row[b * d + c].sub(&tx[a][b]);
                    }
                    rows.push(row);
                }
            }
        }
        let ns = nullspace(rows, d * d)?;
        let v = ns.into_iter().next().ok_or(Error::NotInTwistStabilizer)?;
        let lead = v
            .iter()
            .find(|x| !x.is_zero())
            .expect("nullspace vectors are nonzero")
            .inv()?;
        ps.push(
            (0..d)
                .map(|i| (0..d).map(|j| v[i * d + j].mul(&lead)).collect())
                .collect(),
        );
    }
    let mut values = Vec::with_capacity(k.order());
    for x in k.iter() {
        let a = ctx.point_of(&kbar, x);
        let m = g.mul(g.inv(reps[a]), x);
        values.push(trace(&mat_mul(&ps[a], th(m))));
    }
    let nq = q.order();
    let mut alpha = Vec::with_capacity(nq * nq);
    for a in 0..nq {
        for b in 0..nq {
            let c = q.mul(a, b);
            let m = g.mul(g.inv(reps[c]), g.mul(reps[a], reps[b]));
            let lhs = mat_mul(&ps[a], &ps[b]);
            let rhs = mat_mul(&ps[c], th(m));
            let (i, j) = (0..d * d)
                .map(|e| (e / d, e % d))
                .find(|&(i, j)| !rhs[i][j].is_zero())
                .expect("invertible matrices have nonzero entries");
            let s = lhs[i][j].div(&rhs[i][j])?;
            let ok = (0..d).all(|i| (0..d).all(|j| lhs[i][j] == s.mul(&rhs[i][j])));
            if !ok {
                return Err(Error::Internal(
                    "intertwiners are not projectively multiplicative".into(),
                ));
            }
            alpha.push(s);
        }
    }
    let out = ProjectiveCharacter {
        route: Route::Matrix,
        k: k.clone(),
        kbar,
        values,
        alpha: Cocycle2 { q, values: alpha },
    };
    if !out.check(ctx, &pair.theta) {
        return Err(Error::Internal("matrix strong extension failed its invariants".into()));
    }
    Ok(out)
}

/// How `psi_g` is picked among the valid linear characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiPick {
    First,
    Last,
}

/// `mu(gN)(xN) = theta_hat(g^-1 x g) / (theta_hat(x) psi_g(x))`, evaluated at
/// the first support point of each coset. Rows follow `lbar`, columns follow
/// the cosets of `th.kbar`.
pub fn mu_table(
    ctx: &Context,
    th: &ProjectiveCharacter,
    theta: &[Cyclotomic],
    lbar: &Subgroup,
    pick: PsiPick,
) -> Result<Vec<Vec<Cyclotomic>>> {
    let g = &ctx.g;
    let support: Vec<usize> = (0..th.kbar.order())
        .map(|c| {
            let r = ctx.rep_of(&th.kbar, c);
            ctx.n
                .iter()
                .map(|m| g.mul(r, m))
                .find(|&x| !th.at(x).is_zero())
                .expect("support meets every coset")
        })
        .collect();
    let mut out = Vec::with_capacity(lbar.order());
    for gpos in 0..lbar.order() {
        let gg = ctx.rep_of(lbar, gpos);
        let psi = match pick {
            PsiPick::First => psi_for(g, &ctx.n, theta, gg, &ctx.res_n),
            PsiPick::Last => psi_for_last(g, &ctx.n, theta, gg, &ctx.res_n),
        }
        .ok_or(Error::NotInTwistStabilizer)?;
        let psi = &ctx.lin_g[psi];
        let mut row = Vec::with_capacity(support.len());
        for &x in &support {
            let moved = th.at(g.conj_inv(gg, x));
            let v = moved.div(th.at(x))?.mul(&psi.value(x).inv().to_cyclotomic());
            row.push(v);
        }
        out.push(row);
    }
    Ok(out)
}

/// Coefficient module over `lbar` with points `kbar` modulo `gamma`.
pub fn module_for(ctx: &Context, lbar: &Subgroup, kbar: &Subgroup, k: &Subgroup, gamma: &GammaGroup) -> Module1 {
    let q = &ctx.gbar.group;
    let lm = lbar.members();
    let km = kbar.members();
    let base_mul = lm
        .iter()
        .map(|&a| {
            lm.iter()
                .map(|&b| lbar.position(q.mul(a as usize, b as usize)).unwrap())
                .collect()
        })
        .collect();
    let act = lm
        .iter()
        .map(|&a| {
            km.iter()
                .map(|&x| {
                    kbar.position(q.conj_inv(a as usize, x as usize))
                        .expect("L normalises K")
                })
                .collect()
        })
        .collect();
    let as_fn = |nu: &LinearCharacter| -> Vec<RootOfUnity> {
        (0..km.len())
            .map(|x| nu.value(k.position(ctx.rep_of(kbar, x)).unwrap()))
            .collect()
    };
    Module1 {
        base_mul,
        act,
        gamma: gamma.members.iter().map(as_fn).collect(),
        gamma_gens: gamma.gens.iter().map(as_fn).collect(),
    }
}

fn to_torsion(t: &[Vec<Cyclotomic>]) -> Result<Vec<Vec<RootOfUnity>>> {
    t.iter()
        .map(|r| {
            r.iter()
                .map(|v| {
                    v.as_root_of_unity()
                        .ok_or_else(|| Error::Internal("expected a root of unity".into()))
                })
                .collect()
        })
        .collect()
}

/// Options that change the choices made while computing invariants.
#[derive(Clone, Debug, Default)]
pub struct Variant {
    /// Representative of the twist class (a character index of `N`).
    pub rep: Option<usize>,
    /// Use the largest element of each coset in the transversal.
    pub alt_transversal: bool,
    pub psi_last: bool,
}

/// The invariant data of one twist class of `N`.
#[derive(Clone, Debug)]
pub struct ClassInvariants {
    pub class: usize,
    pub rep: usize,
    pub degree: u64,
    pub k: Subgroup,
    pub l: Subgroup,
    pub kp: Subgroup,
    pub lp: Subgroup,
    pub pair: MonomialPair,
    pub td: TransversalData,
    pub theta_hat: ProjectiveCharacter,
    pub c: H2ClassCertificate,
    /// `Gamma_{K_p, theta~}`.
    pub gamma_p: GammaGroup,
    /// `mu` at `(L_p, K_p, Gamma_p)`, with values in `W_(p)`.
    pub mu: Cocycle1,
    /// The same table before conversion to roots of unity.
    pub mu_raw: Vec<Vec<Cyclotomic>>,
}

impl ClassInvariants {
    pub fn theta<'a>(&self, ctx: &'a Context) -> &'a [Cyclotomic] {
        &ctx.table_n.chars[self.rep].values
    }
}

/// `K_p` and `L_p` with `K_p = K cap L_p`.
pub fn sylow_pair(ctx: &Context, k: &Subgroup, l: &Subgroup) -> (Subgroup, Subgroup) {
    let kp = sylow_over(&ctx.g, &ctx.n, k, ctx.p);
    let lp = sylow_over(&ctx.g, &kp, l, ctx.p);
    (kp, lp)
}

fn alt_reps(ctx: &Context, kp: &Subgroup, lp: &Subgroup) -> Vec<usize> {
    let g = &ctx.g;
    let mut reps: Vec<usize> = (0..ctx.gbar.group.order())
        .map(|c| {
            if c == 0 {
                0
            } else {
                (0..g.order()).filter(|&x| ctx.gbar.project(x) == c).max().unwrap()
            }
        })
        .collect();
    reps.sort_by_key(|&r| (r != 0, !kp.contains(r), !lp.contains(r), core::cmp::Reverse(r)));
    reps
}

pub fn class_invariants(ctx: &Context, class: usize, variant: &Variant, cache: &BasisCache) -> Result<ClassInvariants> {
    let g = &ctx.g;
    let tc = &ctx.classes_n[class];
    let rep = variant.rep.unwrap_or(tc.rep);
    if !tc.members.contains(&rep) {
        return Err(Error::Input("representative outside its class".into()));
    }
    let st = stabilizers(g, &ctx.table_n, &TwistClass { rep, ..tc.clone() });
    let (kp, lp) = sylow_pair(ctx, &st.k, &st.l);
    let theta = ctx.table_n.chars[rep].values.clone();
    let pair = monomial_pair(g, &ctx.n, &kp, &theta)?;
    let td = if variant.alt_transversal {
        TransversalData::with_reps(g, &ctx.n, &kp, &lp, &pair.h, alt_reps(ctx, &kp, &lp))?
    } else {
        TransversalData::new(g, &ctx.n, &kp, &lp, &pair.h)?
    };
    let theta_hat = strong_extension_monomial(ctx, &pair, &td, &kp)?;
    let basis = basis_for(ctx, &theta_hat.kbar, cache);
    let c = h2_certificate(&theta_hat.alpha, &basis)?;
    let gamma_p = gamma_group(g, &kp, &ctx.n, &theta_hat.support(), &ctx.lin_g);
    let lpbar = ctx.bar(&lp);
    let pick = if variant.psi_last {
        PsiPick::Last
    } else {
        PsiPick::First
    };
    let mu_raw = mu_table(ctx, &theta_hat, &theta, &lpbar, pick)?;
    let module = module_for(ctx, &lpbar, &theta_hat.kbar, &kp, &gamma_p);
    let mu = Cocycle1 {
        module,
        values: to_torsion(&mu_raw)?,
    };
    if !check_cocycle1(&mu) {
        return Err(Error::Internal("mu is not a crossed homomorphism modulo Gamma".into()));
    }
    Ok(ClassInvariants {
        class,
        rep,
        degree: tc.degree,
        k: st.k,
        l: st.l,
        kp,
        lp,
        pair,
        td,
        theta_hat,
        c,
        gamma_p,
        mu,
        mu_raw,
    })
}

/// The solver modulus for a cocycle: the exponent of its values times the
/// `p`-part of `|L_p/N| |K_p/N|`, times `p^(headroom - 1)`.
pub fn solver_modulus(ctx: &Context, c: &Cocycle1) -> u64 {
    let base = c.module.base_order() as u64 * c.module.points() as u64;
    c.modulus() * prime_part(base, ctx.p) * ctx.p.pow(ctx.headroom - 1)
}

/// Solves `d beta = gamma` for a torsion 2-cocycle on `q`, with `beta`
/// valued in `W_(M exp(q))`.
fn solve_2_coboundary(q: &FiniteGroup, gamma: &[RootOfUnity]) -> Option<Vec<RootOfUnity>> {
    let m = gamma.iter().fold(1u64, |a, w| num_integer::lcm(a, w.order())) * q.exponent();
    let n = q.order();
    let mut rows = Vec::with_capacity(n * n);
    let mut rhs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut row = vec![0i64; n];
            row[x] += 1;
            row[y] += 1;
            row[q.mul(x, y)] -= 1;
            rows.push(row);
            rhs.push(gamma[x * n + y].exponent_in(m) as i64);
        }
    }
    let sol = solve_mod(&rows, &rhs, n, m)?;
    Some(sol.into_iter().map(|e| RootOfUnity::new(m, e)).collect())
}

/// `mu_b` after replacing `theta_hat_b` by `theta_hat_b beta`, where
/// `d beta = alpha_a / alpha_b`; the result has the factor set of `a`.
pub fn aligned_mu(a: &ClassInvariants, b: &ClassInvariants) -> Result<Cocycle1> {
    if a.kp != b.kp || a.lp != b.lp {
        return Err(Error::Input("classes have different Sylow data".into()));
    }
    if !h2_equal(&a.c, &b.c)? {
        return Err(Error::CInvariantsDiffer);
    }
    let q = &a.theta_hat.alpha.q;
    let ta = a
        .theta_hat
        .alpha
        .as_torsion()
        .ok_or_else(|| Error::Internal("non-torsion factor set".into()))?;
    let tb = b
        .theta_hat
        .alpha
        .as_torsion()
        .ok_or_else(|| Error::Internal("non-torsion factor set".into()))?;
    let gamma: Vec<RootOfUnity> = ta.iter().zip(&tb).map(|(x, y)| x.mul(&y.inv())).collect();
    let beta = solve_2_coboundary(q, &gamma).ok_or(Error::CInvariantsDiffer)?;
    let m = &b.mu.module;
    let values = (0..m.base_order())
        .map(|g| {
            (0..m.points())
                .map(|x| b.mu.values[g][x].mul(&beta[m.act[g][x]]).mul(&beta[x].inv()))
                .collect()
        })
        .collect();
    Ok(Cocycle1 {
        module: m.clone(),
        values,
    })
}

/// Equality of `T` at `(L_p, K_p, Gamma_p)`: the classes must share
/// `(L, K, Gamma)` and `C`; the ratio of the aligned cocycles is then a
/// homomorphism-valued cocycle whose class is decided by the solver.
pub fn t_equal(ctx: &Context, a: &ClassInvariants, b: &ClassInvariants) -> Result<bool> {
    if a.l != b.l || a.k != b.k || a.gamma_p != b.gamma_p {
        return Err(Error::Input("t_equal needs equal (L, K, Gamma)".into()));
    }
    let mb = aligned_mu(a, b)?;
    let rho = mb.ratio(&a.mu);
    let q = &a.theta_hat.alpha.q;
    for row in &rho.values {
        let hom = (0..q.order()).all(|x| (0..q.order()).all(|y| row[q.mul(x, y)] == row[x].mul(&row[y])));
        if !hom {
            return Err(Error::Internal("aligned ratio is not homomorphism-valued".into()));
        }
    }
    let modulus = solver_modulus(ctx, &rho);
    Ok(h1_coboundary_solve(&rho, modulus).is_some())
}

/// Coboundary test for a possibly non-torsion cochain modulo `Gamma`:
/// gauge-fix to roots of unity, then solve. Errors when the gauge-fixed
/// residual is not torsion (the cochain is then not a cocycle modulo
/// torsion).
pub fn is_coboundary_general(ctx: &Context, module: &Module1, table: &[Vec<Cyclotomic>]) -> Result<bool> {
    let (rho, _) = gauge_fix(module, table)?.ok_or_else(|| Error::Internal("non-torsion residual".into()))?;
    if !check_cocycle1(&rho) {
        return Ok(false);
    }
    let modulus = solver_modulus(ctx, &rho);
    Ok(h1_coboundary_solve(&rho, modulus).is_some())
}

/// `T`-equality through the pointwise ratio `mu_b / mu_a` of raw tables,
/// valid for strong extensions with arbitrary factor sets.
pub fn t_equal_ratio(
    ctx: &Context,
    module: &Module1,
    mu_a: &[Vec<Cyclotomic>],
    mu_b: &[Vec<Cyclotomic>],
) -> Result<bool> {
    let ratio: Vec<Vec<Cyclotomic>> = mu_a
        .iter()
        .zip(mu_b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| y.div(x)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    is_coboundary_general(ctx, module, &ratio)
}

/// Structure data for the predicates: `chi` as a table on `G`, the sizes
/// `u`, `u'` and the members of `N`.
struct PredicateData<'a> {
    ctx: &'a Context,
    inv: &'a ClassInvariants,
    chi: Vec<Option<RootOfUnity>>,
    nm: Vec<usize>,
}

impl<'a> PredicateData<'a> {
    fn new(ctx: &'a Context, inv: &'a ClassInvariants) -> PredicateData<'a> {
        let mut chi = vec![None; ctx.g.order()];
        for (pos, a) in inv.pair.a.iter().enumerate() {
            chi[a] = Some(inv.pair.chi.value(pos));
        }
        PredicateData {
            ctx,
            inv,
            chi,
            nm: ctx.n.iter().collect(),
        }
    }

    fn phi(&self, i: usize, x: usize) -> usize {
        self.ctx.g.conj(self.inv.td.y[i], x)
    }

    fn phi_inv(&self, i: usize, x: usize) -> usize {
        self.ctx.g.conj_inv(self.inv.td.y[i], x)
    }

    /// The first-order predicate: for every `n''` in `phi_i(^n (N cap H))`,
    /// `phi_j(^{n'} n'')` stays in that group and `chi` agrees after pulling
    /// back along `phi_i` and `n`.
    fn a_pred(&self, i: usize, n: usize, j: usize, n2: usize) -> bool {
        let g = &self.ctx.g;
        let conj_set: BTreeSet<usize> = self.inv.pair.a.iter().map(|a| self.phi(i, g.conj(n, a))).collect();
        conj_set.iter().all(|&m| {
            let moved = self.phi(j, g.conj(n2, m));
            if !conj_set.contains(&moved) {
                return false;
            }
            let back = |z: usize| g.conj_inv(n, self.phi_inv(i, z));
            self.chi[back(moved)] == self.chi[back(m)]
        })
    }

    /// Direct test `y_j n' in ^{y_i n} H`.
    fn a_direct(&self, i: usize, n: usize, j: usize, n2: usize) -> bool {
        let g = &self.ctx.g;
        let z = g.mul(self.inv.td.y[i], n);
        self.inv.pair.h.contains(g.conj_inv(z, g.mul(self.inv.td.y[j], n2)))
    }

    fn chi_at(&self, x: usize) -> Option<RootOfUnity> {
        self.chi[x]
    }

    /// `chi(t_kappa(i,j)^-1 phi_kappa^-1(n^-1) d_ij phi_i^-1(n') n)`.
    fn conj_chi(&self, i: usize, n: usize, j: usize, n2: usize) -> Option<RootOfUnity> {
        let g = &self.ctx.g;
        let td = &self.inv.td;
        let kap = td.kappa[i][j];
        let mut x = g.inv(td.t[kap]);
        x = g.mul(x, self.phi_inv(kap, g.inv(n)));
        x = g.mul(x, td.d[i][j]);
        x = g.mul(x, self.phi_inv(i, n2));
        x = g.mul(x, n);
        self.chi_at(x)
    }
}

/// Agreement of the predicate `A` with the direct membership test on the
/// given samples `(i, n, j, n')` (indices into the transversal and `N`).
pub fn a_predicate_agrees(ctx: &Context, inv: &ClassInvariants, samples: &[(usize, usize, usize, usize)]) -> bool {
    let pd = PredicateData::new(ctx, inv);
    samples.iter().all(|&(i, n, j, n2)| {
        let (n, n2) = (pd.nm[n], pd.nm[n2]);
        pd.a_pred(i, n, j, n2) == pd.a_direct(i, n, j, n2)
    })
}

/// `Gamma_{K_p}` through the predicate built from `C_ij`: `nu` belongs iff
/// some `eps in Lin(G)`, `i` and `n` make `C_ij` hold for every `j, n'`
/// with `y_j n'` in `H cap ^{y_i n} H`.
pub fn gamma_by_predicate(ctx: &Context, inv: &ClassInvariants) -> GammaGroup {
    let pd = PredicateData::new(ctx, inv);
    let g = &ctx.g;
    let td = &inv.td;
    let u = td.u;
    let kp = &inv.kp;
    let cands = crate::twist::lin_quotient(g, kp, &ctx.n);
    let members = cands
        .into_iter()
        .filter(|nu| {
            ctx.lin_g.iter().any(|eps| {
                (0..u).any(|i| {
                    pd.nm.iter().any(|&n| {
                        (0..u).all(|j| {
                            pd.nm.iter().all(|&n2| {
                                if !(pd.a_pred(0, 0, j, n2) && pd.a_pred(i, n, j, n2)) {
                                    return true;
                                }
                                let lhs = pd
                                    .conj_chi(i, n, j, n2)
                                    .map(|c| c.mul(&nu.value(kp.position(td.y[j]).unwrap())));
                                let rhs = pd
                                    .chi_at(g.mul(g.inv(td.t[j]), n2))
                                    .map(|c| c.mul(&eps.value(td.y[j])).mul(&eps.value(n2)));
                                lhs.is_some() && lhs == rhs
                            })
                        })
                    })
                })
            })
        })
        .collect();
    GammaGroup::from_members(kp, members)
}

/// All coboundaries `g -> ^g w / w` with `w` valued in `W_pe`.
fn coboundary_group(module: &Module1, pe: u64) -> Result<Vec<Vec<Vec<RootOfUnity>>>> {
    const CAP: usize = 1 << 14;
    let b = module.base_order();
    let pts = module.points();
    let one = vec![vec![RootOfUnity::one(); pts]; b];
    let mut gens = Vec::new();
    for x in 0..pts {
        let mut w = vec![RootOfUnity::one(); pts];
        w[x] = RootOfUnity::new(pe, 1);
        let d: Vec<Vec<RootOfUnity>> = (0..b)
            .map(|g| (0..pts).map(|y| w[module.act[g][y]].mul(&w[y].inv())).collect())
            .collect();
        if d != one {
            gens.push(d);
        }
    }
    let mut seen: BTreeSet<Vec<Vec<RootOfUnity>>> = BTreeSet::new();
    seen.insert(one.clone());
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for gd in &gens {
            let y: Vec<Vec<RootOfUnity>> = x
                .iter()
                .zip(gd)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a.mul(b)).collect())
                .collect();
            if seen.insert(y.clone()) {
                if seen.len() > CAP {
                    return Err(Error::Internal("coboundary group too large to enumerate".into()));
                }
                frontier.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// `T(a) = T(b)` through the linearised predicate: with `mu` the cocycle of
/// `b` aligned to the factor set of `a`, there must be a coboundary `delta`
/// such that for every `k < u'` some `i < u`, `n`, `psi` and `nu in Gamma_p`
/// satisfy `A_ij(n, n') and A_kj(1, n') => B_ijk` for all `j < u`, `n'`.
pub fn t_equal_linearised(ctx: &Context, a: &ClassInvariants, b: &ClassInvariants) -> Result<bool> {
    let mu = aligned_mu(a, b)?;
    let pd = PredicateData::new(ctx, a);
    let g = &ctx.g;
    let td = &a.td;
    let (u, up) = (td.u, td.u_prime);
    let kpbar = &a.theta_hat.kbar;
    let lpbar = ctx.bar(&a.lp);
    let pe = prime_part(solver_modulus(ctx, &mu), ctx.p);
    let deltas = coboundary_group(&mu.module, pe)?;
    let nn = pd.nm.len();
    // A table over (i < u', n, j < u, n')
    let mut atab = vec![false; up * nn * u * nn];
    for i in 0..up {
        for (ni, &n) in pd.nm.iter().enumerate() {
            for j in 0..u {
                for (n2i, &n2) in pd.nm.iter().enumerate() {
                    atab[((i * nn + ni) * u + j) * nn + n2i] = pd.a_pred(i, n, j, n2);
                }
            }
        }
    }
    let at = |i: usize, ni: usize, j: usize, n2i: usize| atab[((i * nn + ni) * u + j) * nn + n2i];
    let gamma_vals: Vec<Vec<RootOfUnity>> = mu.module.gamma.clone();
    let point = |x: usize| ctx.point_of(kpbar, x);
    let identity_pos = pd.nm.iter().position(|&x| x == 0).unwrap();
    for delta in &deltas {
        let all_k = (0..up).all(|k| {
            let kb = lpbar.position(ctx.gbar.project(td.y[k])).unwrap();
            (0..u).any(|i| {
                (0..nn).any(|ni| {
                    let n = pd.nm[ni];
                    ctx.lin_g.iter().any(|psi| {
                        gamma_vals.iter().any(|nu| {
                            (0..u).all(|j| {
                                let kap = td.kappa[i][j];
                                let xp = point(td.y[kap]);
                                (0..nn).all(|n2i| {
                                    if !(at(i, ni, j, n2i) && at(k, identity_pos, j, n2i)) {
                                        return true;
                                    }
                                    let n2 = pd.nm[n2i];
                                    let lhs_arg =
                                        g.mul(g.mul(g.inv(td.t[td.kappa[k][j]]), td.d[k][j]), pd.phi_inv(k, n2));
                                    let Some(lhs) = pd.chi_at(lhs_arg) else { return false };
                                    let Some(cc) = pd.conj_chi(i, n, j, n2) else {
                                        return false;
                                    };
                                    let rhs = mu.values[kb][xp]
                                        .mul(&delta[kb][xp])
                                        .mul(&nu[xp])
                                        .mul(&psi.value(td.y[j]))
                                        .mul(&psi.value(n2))
                                        .mul(&cc);
                                    lhs == rhs
                                })
                            })
                        })
                    })
                })
            })
        });
        if all_k {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Invariants at the full level `(L, K, Gamma_K)` through the matrix route;
/// used by the verification suite.
#[derive(Clone, Debug)]
pub struct FullLevel {
    pub theta_hat: ProjectiveCharacter,
    pub gamma: GammaGroup,
    pub lbar: Subgroup,
    pub module: Module1,
    pub mu: Vec<Vec<Cyclotomic>>,
}

pub fn full_level(ctx: &Context, inv: &ClassInvariants) -> Result<FullLevel> {
    let theta = inv.theta(ctx);
    // a pair with H N = K_p is also a monomial model of theta for the matrix route
    let theta_hat = strong_extension_matrix(ctx, &inv.pair, &inv.k)?;
    let gamma = gamma_group(&ctx.g, &inv.k, &ctx.n, &theta_hat.support(), &ctx.lin_g);
    let lbar = ctx.bar(&inv.l);
    let module = module_for(ctx, &lbar, &theta_hat.kbar, &inv.k, &gamma);
    let mu = mu_table(ctx, &theta_hat, theta, &lbar, PsiPick::First)?;
    Ok(FullLevel {
        theta_hat,
        gamma,
        lbar,
        module,
        mu,
    })
}

/// Restriction of the full-level `mu` to `L_q/N` for a prime `q`; returns
/// whether it is a coboundary modulo `Gamma_K`.
pub fn restriction_to_lq_is_coboundary(ctx: &Context, inv: &ClassInvariants, fl: &FullLevel, q: u64) -> Result<bool> {
    let lq = sylow_over(&ctx.g, &ctx.n, &inv.l, q);
    let lqbar = ctx.bar(&lq);
    let sub: Vec<usize> = lqbar.iter().map(|x| fl.lbar.position(x).unwrap()).collect();
    let module = fl.module.restrict(&sub);
    let table: Vec<Vec<Cyclotomic>> = sub.iter().map(|&s| fl.mu[s].clone()).collect();
    is_coboundary_general(ctx, &module, &table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohml::h2_basis;
    use crate::group::center;
    use crate::group::tests::{c4, q8};

    fn q8_ctx() -> Context {
        let g = q8();
        let z = center(&g);
        Context::new(g, z, 2, 1).unwrap()
    }

    #[test]
    fn context_validation() {
        let g = q8();
        let w = Subgroup::whole(&g);
        assert_eq!(
            Context::new(g.clone(), w.clone(), 3, 1).unwrap_err(),
            Error::NotPGroup(3)
        );
        let s3 = crate::group::tests::s3();
        let t = Subgroup::closure(&s3, &[(0..6).find(|&x| s3.elem_order(x) == 2).unwrap()]);
        assert_eq!(Context::new(s3, t, 2, 1).unwrap_err(), Error::NotNormal);
        assert!(Context::new(g, w, 2, 1).is_ok());
    }

    #[test]
    fn q8_central_class_is_nontrivial() {
        let ctx = q8_ctx();
        let cache = BasisCache::new();
        let nontriv = ctx.classes_n.iter().position(|c| c.rep != 0).unwrap();
        let inv = class_invariants(&ctx, nontriv, &Variant::default(), &cache).unwrap();
        assert_eq!(inv.k.order(), 8);
        assert_eq!(inv.theta_hat.values[0], Cyclotomic::from_int(1));
        assert_eq!(inv.c.evals, vec![Cyclotomic::from_int(-1)]);
        assert_eq!(inv.gamma_p.order(), 4);
        // matrix route agrees on the class
        let m = strong_extension_matrix(&ctx, &inv.pair, &inv.kp).unwrap();
        let b = h2_basis(&inv.theta_hat.alpha.q);
        assert!(h2_equal(&h2_certificate(&m.alpha, &b).unwrap(), &inv.c).unwrap());
        assert!(t_equal(&ctx, &inv, &inv).unwrap());
        assert!(t_equal_linearised(&ctx, &inv, &inv).unwrap());
        assert_eq!(gamma_by_predicate(&ctx, &inv), inv.gamma_p);
        // the trivial class has a trivial certificate
        let t = class_invariants(&ctx, 0, &Variant::default(), &cache).unwrap();
        assert!(t.c.is_trivial());
        assert_eq!(t_equal(&ctx, &t, &inv).unwrap_err(), Error::CInvariantsDiffer);
    }

    #[test]
    fn monomial_route_is_projective() {
        // Pi(x) Pi(y) = alpha(x, y) Pi(xy) for the induced monomial matrices
        let ctx = q8_ctx();
        let cache = BasisCache::new();
        let nontriv = ctx.classes_n.iter().position(|c| c.rep != 0).unwrap();
        let inv = class_invariants(&ctx, nontriv, &Variant::default(), &cache).unwrap();
        let g = &ctx.g;
        let chat = chi_hat_table(&ctx, &inv.pair, &inv.td);
        let tr = left_transversal(g, &ctx.n, &inv.pair.a);
        let pi = |x: usize| -> Vec<Vec<Option<RootOfUnity>>> {
            tr.iter()
                .map(|&r| tr.iter().map(|&s| chat[g.mul(g.mul(g.inv(r), x), s)]).collect())
                .collect()
        };
        let kbar = &inv.theta_hat.kbar;
        for x in inv.kp.iter() {
            for y in inv.kp.iter() {
                let (a, b) = (ctx.point_of(kbar, x), ctx.point_of(kbar, y));
                let al = inv.theta_hat.alpha.at(a, b).as_root_of_unity().unwrap();
                let (px, py, pxy) = (pi(x), pi(y), pi(g.mul(x, y)));
                let d = tr.len();
                for i in 0..d {
                    for j in 0..d {
                        let mut s = Cyclotomic::zero();
                        for k in 0..d {
                            if let (Some(u), Some(v)) = (px[i][k], py[k][j]) {
                                s = s.add(&u.mul(&v).to_cyclotomic());
                            }
                        }
                        let rhs = pxy[i][j].map_or(Cyclotomic::zero(), |w| al.mul(&w).to_cyclotomic());
                        assert_eq!(s, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_quotient_has_trivial_invariants() {
        let g = c4();
        let two = (0..4).find(|&x| g.elem_order(x) == 2).unwrap();
        let n = Subgroup::closure(&g, &[two]);
        let ctx = Context::new(g, n, 2, 1).unwrap();
        let cache = BasisCache::new();
        for c in 0..ctx.classes_n.len() {
            let inv = class_invariants(&ctx, c, &Variant::default(), &cache).unwrap();
            assert!(inv.c.gens.is_empty());
            assert!(t_equal(&ctx, &inv, &inv).unwrap());
        }
    }

    #[test]
    fn variants_preserve_tokens() {
        let ctx = q8_ctx();
        let cache = BasisCache::new();
        for c in 0..ctx.classes_n.len() {
            let base = class_invariants(&ctx, c, &Variant::default(), &cache).unwrap();
            for v in [
                Variant {
                    alt_transversal: true,
                    ..Variant::default()
                },
                Variant {
                    psi_last: true,
                    ..Variant::default()
                },
            ] {
                let other = class_invariants(&ctx, c, &v, &cache).unwrap();
                assert!(h2_equal(&base.c, &other.c).unwrap());
                assert!(t_equal(&ctx, &base, &other).unwrap());
            }
        }
    }
}
