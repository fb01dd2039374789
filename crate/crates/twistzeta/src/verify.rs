//! The verification suite: exhaustive and randomized checks of every
//! module contract, grouped by acceptance criterion.

use std::time::{Duration, Instant};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use twistzeta_core::chars::{character_table, check_orthogonality, dixon_table, monomial_table, CharTable};
use twistzeta_core::cohml::{
    h1_coboundary_brute, h1_coboundary_solve, h2_basis, h2_certificate, h2_equal, Cocycle1, Cocycle2, Module1,
};
use twistzeta_core::cyclo::{factorize, Cyclotomic, RootOfUnity};
use twistzeta_core::group::{FiniteGroup, Subgroup, DEFAULT_SIZE_CAP};
use twistzeta_core::inv::{
    a_predicate_agrees, aligned_mu, class_invariants, full_level, gamma_by_predicate, mu_table,
    restriction_to_lq_is_coboundary, solver_modulus, strong_extension_matrix, t_equal, t_equal_linearised,
    t_equal_ratio, ClassInvariants, Context, FullLevel, PsiPick, Variant,
};
use twistzeta_core::twist::{gamma_group, gamma_structure, twist_induce};
use twistzeta_core::zeta::{classes_over, f_tilde, local_table, twist_zeta_of, DirichletPoly};

use crate::error::CliError;
use crate::json;
use crate::pipeline::{self, PipelineRun};

/// Outcome of one check.
#[derive(Clone, Debug)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(criterion: u8, name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            criterion,
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "criterion": self.criterion, "name": self.name, "passed": self.passed, "detail": self.detail })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub headroom: u32,
    /// Random samples for the predicate oracle, per entry.
    pub samples: usize,
    /// Random coboundaries per base group.
    pub coboundaries: usize,
    /// Runtime budget for one pipeline run.
    pub budget: Duration,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0x7715_7a7a,
            headroom: 1,
            samples: 200,
            coboundaries: 500,
            budget: Duration::from_secs(60),
        }
    }
}

/// Checks for one `(G, N, p)`.
#[derive(Clone, Debug)]
pub struct EntryReport {
    pub name: String,
    pub checks: Vec<Check>,
    /// Wall time of the pipeline run (kept out of the JSON report).
    pub elapsed: Duration,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn rng_for(seed: u64, name: &str) -> ChaCha8Rng {
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    });
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn tables_agree(a: &CharTable, b: &CharTable) -> bool {
    a.chars.len() == b.chars.len()
        && a.chars
            .iter()
            .zip(&b.chars)
            .all(|(x, y)| x.degree == y.degree && x.values == y.values)
}

/// Orthogonality, the degree census and engine agreement for one subgroup.
fn table_checks(g: &FiniteGroup, s: &Subgroup, what: &str) -> Result<Check, CliError> {
    let t = character_table(g, s)?;
    let orth = check_orthogonality(&t);
    let sumsq: u64 = t.chars.iter().map(|c| c.degree * c.degree).sum();
    let dixon = dixon_table(g, s)?;
    let mono = monomial_table(g, s);
    let engines = tables_agree(&t, &dixon) && mono.as_ref().is_none_or(|m| tables_agree(m, &dixon));
    let passed = orth && sumsq == s.order() as u64 && engines;
    Ok(Check::new(
        2,
        &format!("character table of {}", what),
        passed,
        format!(
            "{} characters, orthogonality {}, sum of squared degrees {} of {}, engines {}{}",
            t.len(),
            if orth { "exact" } else { "FAILS" },
            sumsq,
            s.order(),
            if engines { "agree" } else { "DISAGREE" },
            if mono.is_some() {
                " (Dixon and monomial)"
            } else {
                " (Dixon only)"
            },
        ),
    ))
}

fn same_invariants(ctx: &Context, a: &ClassInvariants, b: &ClassInvariants) -> Result<bool, CliError> {
    Ok(a.gamma_p == b.gamma_p && h2_equal(&a.c, &b.c)? && t_equal(ctx, a, b)?)
}

fn choice_checks(ctx: &Context, run: &PipelineRun) -> Result<Vec<Check>, CliError> {
    let cache = pipeline::basis_cache(ctx);
    let mut out = Vec::new();
    let mut bad = Vec::new();
    let mut tried = 0;
    for base in &run.invariants {
        let members = &ctx.classes_n[base.class].members;
        if let Some(&other) = members.iter().rev().find(|&&m| m != base.rep) {
            tried += 1;
            let v = class_invariants(
                ctx,
                base.class,
                &Variant {
                    rep: Some(other),
                    ..Variant::default()
                },
                &cache,
            )?;
            if !same_invariants(ctx, base, &v)? {
                bad.push(base.class);
            }
        }
    }
    out.push(Check::new(
        4,
        "representative swap",
        bad.is_empty(),
        format!("{} classes with a second representative, mismatches {:?}", tried, bad),
    ));

    let mut bad = Vec::new();
    for base in &run.invariants {
        let theta = base.theta(ctx);
        let mat = strong_extension_matrix(ctx, &base.pair, &base.kp)?;
        let basis = h2_basis(&base.theta_hat.alpha.q);
        let c_ok = h2_equal(&h2_certificate(&mat.alpha, &basis)?, &base.c)?;
        let gamma = gamma_group(&ctx.g, &base.kp, &ctx.n, &mat.support(), &ctx.lin_g);
        let lpbar = ctx.bar(&base.lp);
        let mu = mu_table(ctx, &mat, theta, &lpbar, PsiPick::First)?;
        let t_ok = t_equal_ratio(ctx, &base.mu.module, &base.mu_raw, &mu)?;
        if !(c_ok && t_ok && gamma == base.gamma_p) {
            bad.push(base.class);
        }
    }
    out.push(Check::new(
        4,
        "monomial and matrix routes",
        bad.is_empty(),
        format!("{} classes, mismatches {:?}", run.invariants.len(), bad),
    ));

    for (name, variant) in [
        (
            "transversal permutation",
            Variant {
                alt_transversal: true,
                ..Variant::default()
            },
        ),
        (
            "psi re-selection",
            Variant {
                psi_last: true,
                ..Variant::default()
            },
        ),
    ] {
        let mut bad = Vec::new();
        for base in &run.invariants {
            let v = class_invariants(ctx, base.class, &variant, &cache)?;
            if !same_invariants(ctx, base, &v)? {
                bad.push(base.class);
            }
        }
        out.push(Check::new(
            4,
            name,
            bad.is_empty(),
            format!("{} classes, mismatches {:?}", run.invariants.len(), bad),
        ));
    }
    Ok(out)
}

/// Pairs of classes that share `(L, K, Gamma_p)` and `C`, self-pairs
/// included.
fn comparable_pairs(run: &PipelineRun) -> Result<Vec<(usize, usize)>, CliError> {
    let invs = &run.invariants;
    let mut out = Vec::new();
    for a in 0..invs.len() {
        for b in a..invs.len() {
            let (x, y) = (&invs[a], &invs[b]);
            if x.l == y.l && x.k == y.k && x.gamma_p == y.gamma_p && h2_equal(&x.c, &y.c)? {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

fn sylow_checks(ctx: &Context, run: &PipelineRun, pairs: &[(usize, usize)]) -> Result<Vec<Check>, CliError> {
    let invs = &run.invariants;
    let fls: Vec<FullLevel> = invs.iter().map(|inv| full_level(ctx, inv)).collect::<Result<_, _>>()?;
    let mut applicable = 0;
    let mut bad_lq = Vec::new();
    for (inv, fl) in invs.iter().zip(&fls) {
        let idx = (inv.l.order() / ctx.n.order()) as u64;
        for (q, _) in factorize(idx) {
            if q == ctx.p {
                continue;
            }
            applicable += 1;
            if !restriction_to_lq_is_coboundary(ctx, inv, fl, q)? {
                bad_lq.push((inv.class, q));
            }
        }
    }
    let mut out = vec![Check::new(
        5,
        "restriction to L_q is a coboundary",
        bad_lq.is_empty(),
        format!("{} applicable (class, q) instances, failures {:?}", applicable, bad_lq),
    )];

    let structs: Vec<_> = invs
        .iter()
        .zip(&fls)
        .map(|(inv, fl)| gamma_structure(&ctx.g, &fl.gamma, ctx.p, &inv.kp, &ctx.lin_g))
        .collect();
    let mut bad_gamma = Vec::new();
    for (i, (inv, gs)) in invs.iter().zip(&structs).enumerate() {
        if !gs.splits || gs.gamma_p != inv.gamma_p || gamma_by_predicate(ctx, inv) != inv.gamma_p {
            bad_gamma.push(i);
        }
    }
    for a in 0..invs.len() {
        for b in 0..invs.len() {
            if invs[a].k == invs[b].k {
                let full_eq = fls[a].gamma == fls[b].gamma;
                let sylow_eq = invs[a].gamma_p == structs[b].gamma_p;
                if full_eq != sylow_eq {
                    bad_gamma.push(a);
                }
            }
        }
    }
    bad_gamma.sort();
    bad_gamma.dedup();
    out.push(Check::new(
        5,
        "Gamma splits and is determined at the Sylow level",
        bad_gamma.is_empty(),
        format!("{} classes, failures {:?}", invs.len(), bad_gamma),
    ));

    let mut bad_t = Vec::new();
    let mut converse = 0;
    for &(a, b) in pairs {
        let sylow = t_equal(ctx, &invs[a], &invs[b])?;
        let full = fls[a].gamma == fls[b].gamma && t_equal_ratio(ctx, &fls[a].module, &fls[a].mu, &fls[b].mu)?;
        if sylow && !full {
            bad_t.push((a, b));
        }
        if sylow == full {
            converse += 1;
        }
    }
    out.push(Check::new(
        5,
        "Sylow-level T equality gives full-level T equality",
        bad_t.is_empty(),
        format!(
            "{} comparable pairs, {} with identical verdicts at both levels, failures {:?}",
            pairs.len(),
            converse,
            bad_t
        ),
    ));
    Ok(out)
}

/// Random coboundaries evaluate to one on every homology generator.
fn coboundary_check(q: &FiniteGroup, what: &str, count: usize, rng: &mut ChaCha8Rng) -> Result<Check, CliError> {
    let basis = h2_basis(q);
    let m = 2 * q.exponent();
    let mut bad = 0;
    for _ in 0..count {
        let beta: Vec<Cyclotomic> = (0..q.order())
            .map(|_| Cyclotomic::root_of_unity(m, rng.next_u64() % m))
            .collect();
        let alpha = Cocycle2::coboundary(q, &beta)?;
        if !h2_certificate(&alpha, &basis)?.is_trivial() {
            bad += 1;
        }
    }
    Ok(Check::new(
        7,
        &format!("random coboundaries on {}", what),
        bad == 0,
        format!(
            "{} coboundaries, {} generators of orders {:?}, {} non-trivial evaluations",
            count,
            basis.gens.len(),
            basis.orders,
            bad
        ),
    ))
}

fn random_root(rng: &mut ChaCha8Rng, m: u64) -> RootOfUnity {
    RootOfUnity::new(m, rng.next_u64() % m)
}

/// `mu^k`, times a random coboundary of `W_m`-valued `omega`, times a
/// random element of `Gamma` per base element.
fn perturb(c: &Cocycle1, m: u64, rng: &mut ChaCha8Rng) -> Cocycle1 {
    let md = &c.module;
    let k = rng.next_u64() % 4;
    let omega: Vec<RootOfUnity> = (0..md.points()).map(|_| random_root(rng, m)).collect();
    let values = (0..md.base_order())
        .map(|g| {
            let nu = &md.gamma[below(rng, md.gamma.len())];
            (0..md.points())
                .map(|x| {
                    c.values[g][x]
                        .pow(k as i64)
                        .mul(&omega[md.act[g][x]])
                        .mul(&omega[x].inv())
                        .mul(&nu[x])
                })
                .collect()
        })
        .collect();
    Cocycle1 {
        module: md.clone(),
        values,
    }
}

/// Solver against exhaustive search on the cocycles of the entry, their
/// perturbations and the ratios of comparable pairs.
fn solver_check(
    ctx: &Context,
    run: &PipelineRun,
    pairs: &[(usize, usize)],
    rng: &mut ChaCha8Rng,
) -> Result<Check, CliError> {
    let mut pool: Vec<Cocycle1> = run.invariants.iter().map(|i| i.mu.clone()).collect();
    for &(a, b) in pairs {
        let mb = aligned_mu(&run.invariants[a], &run.invariants[b])?;
        pool.push(mb.ratio(&run.invariants[a].mu));
    }
    let mut instances = 0;
    let mut bad = 0;
    let base: Vec<Cocycle1> = pool.clone();
    for c in &base {
        for _ in 0..8 {
            let m = solver_modulus(ctx, c);
            if m <= 4 {
                pool.push(perturb(c, m, rng));
            }
        }
    }
    for c in &pool {
        let m = solver_modulus(ctx, c);
        if c.module.points() > 6 || m > 4 {
            continue;
        }
        instances += 1;
        if h1_coboundary_solve(c, m).is_some() != h1_coboundary_brute(c, m) {
            bad += 1;
        }
    }
    Ok(Check::new(
        7,
        "H1 solver matches exhaustive search",
        bad == 0,
        format!(
            "{} instances with at most 6 points and modulus at most 4, {} disagreements",
            instances, bad
        ),
    ))
}

fn headroom_check(ctx: &Context, run: &PipelineRun, pairs: &[(usize, usize)]) -> Result<Check, CliError> {
    let mut wider = ctx.clone();
    wider.headroom += 1;
    let mut bad = Vec::new();
    for inv in &run.invariants {
        let a = h1_coboundary_solve(&inv.mu, solver_modulus(ctx, &inv.mu)).is_some();
        let b = h1_coboundary_solve(&inv.mu, solver_modulus(&wider, &inv.mu)).is_some();
        if a != b {
            bad.push(format!("class {}", inv.class));
        }
    }
    for &(a, b) in pairs {
        let x = t_equal(ctx, &run.invariants[a], &run.invariants[b])?;
        let y = t_equal(&wider, &run.invariants[a], &run.invariants[b])?;
        if x != y {
            bad.push(format!("pair ({}, {})", a, b));
        }
    }
    Ok(Check::new(
        7,
        "verdicts stable under extra headroom",
        bad.is_empty(),
        format!(
            "{} cocycles and {} pairs at headroom {} and {}, changes {:?}",
            run.invariants.len(),
            pairs.len(),
            ctx.headroom,
            wider.headroom,
            bad
        ),
    ))
}

fn predicate_checks(
    ctx: &Context,
    run: &PipelineRun,
    pairs: &[(usize, usize)],
    opts: &VerifyOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Check>, CliError> {
    let invs = &run.invariants;
    let nn = ctx.n.order();
    let mut bad = 0;
    for s in 0..opts.samples {
        let inv = &invs[s % invs.len()];
        let sample = (
            below(rng, inv.td.u_prime),
            below(rng, nn),
            below(rng, inv.td.u),
            below(rng, nn),
        );
        if !a_predicate_agrees(ctx, inv, &[sample]) {
            bad += 1;
        }
    }
    let a_check = Check::new(
        8,
        "predicate A against direct membership",
        bad == 0,
        format!("{} random samples, {} disagreements", opts.samples, bad),
    );
    let mut bad_pairs = Vec::new();
    for &(a, b) in pairs {
        if t_equal(ctx, &invs[a], &invs[b])? != t_equal_linearised(ctx, &invs[a], &invs[b])? {
            bad_pairs.push((a, b));
        }
    }
    let t_check = Check::new(
        8,
        "linearised T equality against the ratio route",
        bad_pairs.is_empty(),
        format!("{} comparable pairs, disagreements {:?}", pairs.len(), bad_pairs),
    );
    Ok(vec![a_check, t_check])
}

/// Pairwise `t_equal` on comparable classes must be reflexive, symmetric and
/// transitive, and its classes must be exactly the buckets.
fn t_relation_check(ctx: &Context, run: &PipelineRun, pairs: &[(usize, usize)]) -> Result<Check, CliError> {
    let n = run.invariants.len();
    let mut rel: Vec<Vec<Option<bool>>> = vec![vec![None; n]; n];
    for &(a, b) in pairs {
        rel[a][b] = Some(t_equal(ctx, &run.invariants[a], &run.invariants[b])?);
        rel[b][a] = Some(t_equal(ctx, &run.invariants[b], &run.invariants[a])?);
    }
    let mut bucket_of = vec![0usize; n];
    for (i, b) in run.buckets.iter().enumerate() {
        for &m in &b.members {
            bucket_of[m] = i;
        }
    }
    let mut bad = Vec::new();
    for a in 0..n {
        if rel[a][a] != Some(true) {
            bad.push(format!("{} not reflexive", a));
        }
        for b in 0..n {
            let Some(ab) = rel[a][b] else { continue };
            if rel[b][a] != Some(ab) {
                bad.push(format!("({}, {}) not symmetric", a, b));
            }
            if ab != (bucket_of[a] == bucket_of[b]) {
                bad.push(format!("({}, {}) disagrees with the buckets", a, b));
            }
            for c in 0..n {
                if ab && rel[b][c] == Some(true) && rel[a][c] != Some(true) {
                    bad.push(format!("({}, {}, {}) not transitive", a, b, c));
                }
            }
        }
    }
    Ok(Check::new(
        6,
        "T equality is an equivalence matching the buckets",
        bad.is_empty(),
        format!("{} comparable pairs, failures {:?}", pairs.len(), bad),
    ))
}

/// Runs every per-entry check.
pub fn verify_entry(
    name: &str,
    g: FiniteGroup,
    n: Subgroup,
    p: u64,
    opts: &VerifyOptions,
) -> Result<EntryReport, CliError> {
    let mut rng = rng_for(opts.seed, name);
    let start = Instant::now();
    let run = pipeline::run(g, n, p, opts.headroom)?;
    let elapsed = start.elapsed();
    let ctx = &run.ctx;
    let mut checks = Vec::new();

    let partial_sum = run
        .buckets
        .iter()
        .fold(DirichletPoly::zero(), |acc, b| acc.add(&b.partial(&run.invariants)));
    checks.push(Check::new(
        1,
        "assembled series equals brute force",
        run.agree() && elapsed <= opts.budget,
        format!(
            "assembled {}, brute force {}, {}",
            run.assembled,
            run.brute,
            if elapsed <= opts.budget {
                "within budget"
            } else {
                "OVER BUDGET"
            }
        ),
    ));
    let zn = twist_zeta_of(&ctx.classes_n);
    checks.push(Check::new(
        1,
        "partial series sum to the twist series of N",
        partial_sum == zn,
        format!("{} against {}", partial_sum, zn),
    ));

    let whole = Subgroup::whole(&ctx.g);
    checks.push(table_checks(&ctx.g, &whole, "G")?);
    checks.push(table_checks(&ctx.g, &ctx.n, "N")?);

    let gt = local_table(ctx, &whole)?;
    let mut bad = Vec::new();
    for inv in &run.invariants {
        let members = &ctx.classes_n[inv.class].members;
        let lt = &run
            .tables
            .get(inv.l.members())
            .cloned()
            .map_or_else(|| local_table(ctx, &inv.l), Ok)?;
        let mut images = classes_over(ctx, lt, members)
            .into_iter()
            .map(|c| twist_induce(&ctx.g, &lt.table, &lt.classes[c], &gt.table, &gt.classes))
            .collect::<Result<Vec<_>, _>>()?;
        let count = images.len();
        images.sort();
        images.dedup();
        if images.len() != count || images != classes_over(ctx, &gt, members) {
            bad.push(inv.class);
        }
    }
    checks.push(Check::new(
        3,
        "twist induction is a bijection",
        bad.is_empty(),
        format!("{} classes, failures {:?}", run.invariants.len(), bad),
    ));

    checks.extend(choice_checks(ctx, &run)?);
    let pairs = comparable_pairs(&run)?;
    checks.extend(sylow_checks(ctx, &run, &pairs)?);

    let mut bad = Vec::new();
    for (bi, (b, f)) in run.buckets.iter().zip(&run.f_tildes).enumerate() {
        let lt = &run.tables[b.l.members()];
        for &m in &b.members {
            if &f_tilde(ctx, lt, run.invariants[m].class) != f {
                bad.push((bi, m));
            }
        }
    }
    checks.push(Check::new(
        6,
        "f~ constant on buckets",
        bad.is_empty(),
        format!("{} buckets, mismatches {:?}", run.buckets.len(), bad),
    ));
    checks.push(t_relation_check(ctx, &run, &pairs)?);

    let mut kpbars: Vec<Subgroup> = run.invariants.iter().map(|i| i.theta_hat.kbar.clone()).collect();
    kpbars.sort();
    kpbars.dedup();
    for kb in &kpbars {
        checks.push(coboundary_check(
            &ctx.qgroup(kb),
            &format!("K_p/N of order {}", kb.order()),
            opts.coboundaries,
            &mut rng,
        )?);
    }
    checks.push(solver_check(ctx, &run, &pairs, &mut rng)?);
    checks.push(headroom_check(ctx, &run, &pairs)?);
    checks.extend(predicate_checks(ctx, &run, &pairs, opts, &mut rng)?);

    Ok(EntryReport {
        name: name.into(),
        checks,
        elapsed,
    })
}

fn perm(points: usize, gens: &[&[&[usize]]]) -> FiniteGroup {
    let gens: Vec<Vec<Vec<usize>>> = gens.iter().map(|g| g.iter().map(|c| c.to_vec()).collect()).collect();
    FiniteGroup::from_permutations(points, &gens, DEFAULT_SIZE_CAP).expect("valid permutations")
}

/// A module over the cyclic group of order `m` acting trivially on `pts`
/// points, with trivial `Gamma`.
fn trivial_module(m: usize, pts: usize) -> Module1 {
    let ones = vec![RootOfUnity::one(); pts];
    Module1 {
        base_mul: (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect(),
        act: vec![(0..pts).collect(); m],
        gamma: vec![ones],
        gamma_gens: Vec::new(),
    }
}

/// Checks that do not depend on a corpus entry.
pub fn verify_global(opts: &VerifyOptions) -> Result<Vec<Check>, CliError> {
    let mut rng = rng_for(opts.seed, "global");
    let mut checks = Vec::new();
    let bases: [(&str, FiniteGroup); 6] = [
        ("C2", perm(2, &[&[&[1, 2]]])),
        ("C4", perm(4, &[&[&[1, 2, 3, 4]]])),
        ("C2 x C2", perm(4, &[&[&[1, 2]], &[&[3, 4]]])),
        ("C3 x C3", perm(6, &[&[&[1, 2, 3]], &[&[4, 5, 6]]])),
        ("D4", perm(4, &[&[&[1, 2, 3, 4]], &[&[1, 3]]])),
        ("C2 x C4", perm(6, &[&[&[1, 2]], &[&[3, 4, 5, 6]]])),
    ];
    for (name, q) in &bases {
        checks.push(coboundary_check(q, name, opts.coboundaries, &mut rng)?);
    }

    let v4 = &bases[2].1;
    let basis = h2_basis(v4);
    let mut evals = Vec::new();
    for name in ["q8", "d4"] {
        let e = crate::corpus::load(name).expect("corpus entry");
        let ctx = Context::new(e.group, e.normal, e.p, opts.headroom)?;
        let class = ctx
            .classes_n
            .iter()
            .position(|c| !ctx.table_n.chars[c.rep].values.iter().all(|v| v.is_one()))
            .expect("a nontrivial central character");
        let inv = class_invariants(&ctx, class, &Variant::default(), &Default::default())?;
        evals.push((name, inv.c.evals.clone()));
    }
    let minus_one = vec![Cyclotomic::from_int(-1)];
    let passed = basis.orders == vec![num_bigint::BigInt::from(2)] && evals.iter().all(|(_, e)| *e == minus_one);
    checks.push(Check::new(
        7,
        "C2 x C2 multiplier and the quaternion and dihedral factor sets",
        passed,
        format!(
            "generator orders {:?}; evaluations {}",
            basis.orders,
            evals
                .iter()
                .map(|(n, e)| format!(
                    "{} {}",
                    n,
                    e.iter().map(|c| format!("{:?}", c)).collect::<Vec<_>>().join(",")
                ))
                .collect::<Vec<_>>()
                .join("; ")
        ),
    ));

    let mut instances = 0;
    let mut bad = 0;
    for m in 2..=4usize {
        for pts in 1..=6usize {
            for modulus in 2..=4u64 {
                let module = trivial_module(m, pts);
                for _ in 0..6 {
                    // a homomorphism from the cyclic base: mu(g^k) = f^k with f^m = 1
                    let f: Vec<RootOfUnity> = (0..pts)
                        .map(|_| {
                            let d = num_integer::gcd(m as u64, modulus);
                            RootOfUnity::new(d, rng.next_u64() % d)
                        })
                        .collect();
                    let values = (0..m).map(|k| f.iter().map(|w| w.pow(k as i64)).collect()).collect();
                    let c = Cocycle1 {
                        module: module.clone(),
                        values,
                    };
                    instances += 1;
                    if h1_coboundary_solve(&c, modulus).is_some() != h1_coboundary_brute(&c, modulus) {
                        bad += 1;
                    }
                }
            }
        }
    }
    checks.push(Check::new(
        7,
        "H1 solver matches exhaustive search on trivial actions",
        bad == 0,
        format!("{} instances, {} disagreements", instances, bad),
    ));
    Ok(checks)
}

pub fn report_json(entries: &[EntryReport], global: &[Check]) -> Value {
    let entries: Vec<Value> = entries
        .iter()
        .map(|e| json!({ "entry": e.name, "passed": e.passed(), "checks": e.checks.iter().map(Check::to_json).collect::<Vec<_>>() }))
        .collect();
    let passed = entries.iter().all(|e| e["passed"] == true) && global.iter().all(|c| c.passed);
    json!({
        "schema": json::SCHEMA,
        "command": "verify",
        "global": global.iter().map(Check::to_json).collect::<Vec<_>>(),
        "entries": entries,
        "passed": passed,
    })
}

/// One verdict per criterion over all entries and the global checks.
pub fn criterion_summary(entries: &[EntryReport], global: &[Check]) -> Vec<(u8, bool, usize)> {
    (1..=8u8)
        .map(|k| {
            let all: Vec<&Check> = entries
                .iter()
                .flat_map(|e| e.checks.iter())
                .chain(global.iter())
                .filter(|c| c.criterion == k)
                .collect();
            (k, !all.is_empty() && all.iter().all(|c| c.passed), all.len())
        })
        .collect()
}
