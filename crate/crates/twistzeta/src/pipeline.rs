//! Parallel driver for the classification and the zeta assembly, and the
//! report it produces.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use twistzeta_core::cohml::h2_basis;
use twistzeta_core::group::{FiniteGroup, Subgroup};
use twistzeta_core::inv::{class_invariants, sylow_pair, BasisCache, ClassInvariants, Context, Variant};
use twistzeta_core::twist::stabilizers;
use twistzeta_core::zeta::{
    assemble, brute_twist_zeta, bucketize, f_tilde, local_table, twist_zeta_of, Bucket, DirichletPoly, LocalTable,
};

use crate::error::CliError;
use crate::json;

/// Result of a pipeline run.
pub struct PipelineRun {
    pub ctx: Context,
    pub invariants: Vec<ClassInvariants>,
    pub buckets: Vec<Bucket>,
    pub f_tildes: Vec<DirichletPoly>,
    pub tables: BTreeMap<Vec<u32>, LocalTable>,
    pub assembled: DirichletPoly,
    pub brute: DirichletPoly,
}

impl PipelineRun {
    pub fn agree(&self) -> bool {
        self.assembled == self.brute
    }
}

/// `H_2` bases for every distinct `K_p/N`, built in parallel.
pub fn basis_cache(ctx: &Context) -> BasisCache {
    let mut kpbars: Vec<Subgroup> = ctx
        .classes_n
        .iter()
        .map(|c| {
            let st = stabilizers(&ctx.g, &ctx.table_n, c);
            ctx.bar(&sylow_pair(ctx, &st.k, &st.l).0)
        })
        .collect();
    kpbars.sort();
    kpbars.dedup();
    kpbars
        .into_par_iter()
        .map(|kb| (kb.members().to_vec(), h2_basis(&ctx.qgroup(&kb))))
        .collect()
}

pub fn invariants(ctx: &Context, cache: &BasisCache) -> Result<Vec<ClassInvariants>, CliError> {
    (0..ctx.classes_n.len())
        .into_par_iter()
        .map(|c| class_invariants(ctx, c, &Variant::default(), cache))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::from)
}

/// Local tables for the given subgroups, one per distinct member list.
pub fn local_tables<'a>(
    ctx: &Context,
    ls: impl Iterator<Item = &'a Subgroup>,
) -> Result<BTreeMap<Vec<u32>, LocalTable>, CliError> {
    let mut distinct: Vec<&Subgroup> = ls.collect();
    distinct.sort();
    distinct.dedup();
    let built = distinct
        .into_par_iter()
        .map(|l| local_table(ctx, l).map(|t| (l.members().to_vec(), t)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(built.into_iter().collect())
}

pub fn run(g: FiniteGroup, n: Subgroup, p: u64, headroom: u32) -> Result<PipelineRun, CliError> {
    let ctx = Context::new(g, n, p, headroom)?;
    let cache = basis_cache(&ctx);
    let invariants = invariants(&ctx, &cache)?;
    let buckets = bucketize(&ctx, &invariants)?;
    let tables = local_tables(&ctx, buckets.iter().map(|b| &b.l))?;
    let f_tildes: Vec<DirichletPoly> = buckets
        .par_iter()
        .map(|b| f_tilde(&ctx, &tables[b.l.members()], invariants[b.members[0]].class))
        .collect();
    let assembled = assemble(&ctx, &invariants, &buckets, &f_tildes)?;
    let brute = brute_twist_zeta(&ctx.g)?;
    Ok(PipelineRun {
        ctx,
        invariants,
        buckets,
        f_tildes,
        tables,
        assembled,
        brute,
    })
}

pub fn group_header(ctx: &Context) -> Value {
    json!({
        "order": ctx.g.order(),
        "normal": json::subgroup(&ctx.g, &ctx.n),
        "prime": ctx.p,
        "headroom": ctx.headroom,
    })
}

fn class_entry(ctx: &Context, inv: &ClassInvariants) -> Value {
    let tc = &ctx.classes_n[inv.class];
    json!({
        "rep": inv.rep,
        "members": tc.members,
        "degree": inv.degree,
        "K": json::subgroup(&ctx.g, &inv.k),
        "L": json::subgroup(&ctx.g, &inv.l),
        "Gamma": json::gamma_ids(&ctx.g, &inv.gamma_p, &ctx.n),
    })
}

pub fn report(run: &PipelineRun) -> Value {
    let ctx = &run.ctx;
    let mut bucket_of = vec![0usize; run.invariants.len()];
    for (b, bucket) in run.buckets.iter().enumerate() {
        for &m in &bucket.members {
            bucket_of[m] = b;
        }
    }
    let classes: Vec<Value> = run
        .invariants
        .iter()
        .enumerate()
        .map(|(i, inv)| {
            let b = &run.buckets[bucket_of[i]];
            let mut e = class_entry(ctx, inv);
            let o = e.as_object_mut().unwrap();
            o.insert("C".into(), json::certificate(&inv.c));
            o.insert("c_id".into(), json!(b.c_id));
            o.insert("T".into(), json!({ "token": b.t_id, "cocycle": json::token(&inv.mu) }));
            o.insert("bucket".into(), json!(bucket_of[i]));
            e
        })
        .collect();
    let buckets: Vec<Value> = run
        .buckets
        .iter()
        .zip(&run.f_tildes)
        .map(|(b, f)| {
            let rep = &run.invariants[b.members[0]];
            json!({
                "key": {
                    "L": json::subgroup(&ctx.g, &b.l),
                    "K": json::subgroup(&ctx.g, &b.k),
                    "Gamma": json::gamma_ids(&ctx.g, &rep.gamma_p, &ctx.n),
                    "c": b.c_id,
                    "t": b.t_id,
                },
                "index": ctx.g.order() / b.l.order(),
                "members": b.members,
                "partial": json::poly(&b.partial(&run.invariants)),
                "f_tilde": json::poly(f),
            })
        })
        .collect();
    json!({
        "schema": json::SCHEMA,
        "command": "pipeline",
        "group": group_header(ctx),
        "classes": classes,
        "buckets": buckets,
        "zeta": {
            "assembled": json::poly(&run.assembled),
            "brute": json::poly(&run.brute),
            "normal_twist_series": json::poly(&twist_zeta_of(&ctx.classes_n)),
            "display": run.assembled.to_string(),
            "agree": run.agree(),
        },
    })
}
