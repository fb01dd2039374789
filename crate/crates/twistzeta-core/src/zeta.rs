//! Finite Dirichlet polynomials and the assembly of the twist zeta function
//! from per-class invariants.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chars::{character_table, inner_product, restrict, CharTable};
use crate::cohml::h2_equal;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::inv::{class_invariants, t_equal, BasisCache, ClassInvariants, Context, Variant};
use crate::twist::{twist_classes, TwistClass};

/// `sum a_n n^-s` with finitely many nonzero integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DirichletPoly {
    terms: BTreeMap<u64, BigInt>,
}

impl DirichletPoly {
    pub fn zero() -> DirichletPoly {
        DirichletPoly::default()
    }

    pub fn one() -> DirichletPoly {
        DirichletPoly::term(1, BigInt::one())
    }

    pub fn term(n: u64, a: BigInt) -> DirichletPoly {
        let mut p = DirichletPoly::zero();
        p.add_term(n, a);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, BigInt)>>(it: I) -> DirichletPoly {
        let mut p = DirichletPoly::zero();
        for (n, a) in it {
            p.add_term(n, a);
        }
        p
    }

    pub fn add_term(&mut self, n: u64, a: BigInt) {
        let e = self.terms.entry(n).or_insert_with(BigInt::zero);
        *e += a;
        if e.is_zero() {
            self.terms.remove(&n);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.terms.iter().map(|(&n, a)| (n, a))
    }

    pub fn coeff(&self, n: u64) -> BigInt {
        self.terms.get(&n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &DirichletPoly) -> DirichletPoly {
        let mut out = self.clone();
        for (n, a) in other.terms() {
            out.add_term(n, a.clone());
        }
        out
    }

    /// Dirichlet convolution.
    pub fn mul(&self, other: &DirichletPoly) -> DirichletPoly {
        let mut out = DirichletPoly::zero();
        for (n, a) in self.terms() {
            for (m, b) in other.terms() {
                out.add_term(n * m, a * b);
            }
        }
        out
    }

    /// `k^-s` times the polynomial.
    pub fn shift(&self, k: u64) -> DirichletPoly {
        DirichletPoly::from_terms(self.terms().map(|(n, a)| (n * k, a.clone())))
    }

    /// Value at `s = 0`, the number of counted objects.
    pub fn count(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl fmt::Display for DirichletPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (n, a) in self.terms() {
            let neg = a < &BigInt::zero();
            let mag = if neg { -a } else { a.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (n, mag.is_one()) {
                (1, _) => write!(f, "{}", mag)?,
                (_, true) => write!(f, "{}^-s", n)?,
                (_, false) => write!(f, "{}*{}^-s", mag, n)?,
            }
        }
        Ok(())
    }
}

/// `sum_{chi in Irr(S)} chi(1)^-s`.
pub fn rep_zeta(table: &CharTable) -> DirichletPoly {
    DirichletPoly::from_terms(table.chars.iter().map(|c| (c.degree, BigInt::one())))
}

/// One term `d^-s` per `G`-twist class of `Irr(S)`.
pub fn twist_zeta_of(classes: &[TwistClass]) -> DirichletPoly {
    DirichletPoly::from_terms(classes.iter().map(|c| (c.degree, BigInt::one())))
}

/// The twist zeta function of `G` from its own character table.
pub fn brute_twist_zeta(g: &FiniteGroup) -> Result<DirichletPoly> {
    let whole = Subgroup::whole(g);
    let table = character_table(g, &whole)?;
    let lin = crate::chars::linear_characters(g, &whole);
    Ok(twist_zeta_of(&twist_classes(g, &table, &lin)))
}

/// Character table of a stabiliser with its `G`-twist classes.
#[derive(Clone, Debug)]
pub struct LocalTable {
    pub table: CharTable,
    pub classes: Vec<TwistClass>,
}

pub fn local_table(ctx: &Context, l: &Subgroup) -> Result<LocalTable> {
    let table = character_table(&ctx.g, l)?;
    let classes = twist_classes(&ctx.g, &table, &ctx.lin_g);
    Ok(LocalTable { table, classes })
}

/// Indices of the classes of `lt` lying over some member of the twist class
/// `theta_members` of `Irr(N)`.
pub fn classes_over(ctx: &Context, lt: &LocalTable, theta_members: &[usize]) -> Vec<usize> {
    let l = &lt.table.domain;
    (0..lt.classes.len())
        .filter(|&c| {
            let res = restrict(l, &lt.table.chars[lt.classes[c].rep].values, &ctx.n);
            theta_members
                .iter()
                .any(|&t| !inner_product(&res, &ctx.table_n.chars[t].values).is_zero())
        })
        .collect()
}

/// `f~(L, N, theta~) = sum over twist classes of L over theta~ of
/// (lambda(1)/theta(1))^-s`.
pub fn f_tilde(ctx: &Context, lt: &LocalTable, class: usize) -> DirichletPoly {
    let tc = &ctx.classes_n[class];
    DirichletPoly::from_terms(
        classes_over(ctx, lt, &tc.members)
            .into_iter()
            .map(|c| (lt.classes[c].degree / tc.degree, BigInt::one())),
    )
}

/// Invariants of every twist class of `Irr(N)`, in class order.
pub fn all_invariants(ctx: &Context, cache: &BasisCache) -> Result<Vec<ClassInvariants>> {
    (0..ctx.classes_n.len())
        .map(|c| class_invariants(ctx, c, &Variant::default(), cache))
        .collect()
}

/// Classes grouped by `(L, K, Gamma, C, T)`.
#[derive(Clone, Debug)]
pub struct Bucket {
    pub l: Subgroup,
    pub k: Subgroup,
    /// Indices into the invariant list, ascending.
    pub members: Vec<usize>,
    pub c_id: usize,
    pub t_id: usize,
}

impl Bucket {
    /// `sum over the bucket of theta(1)^-s`.
    pub fn partial(&self, invs: &[ClassInvariants]) -> DirichletPoly {
        DirichletPoly::from_terms(self.members.iter().map(|&i| (invs[i].degree, BigInt::one())))
    }
}

/// `(L, K, exponent vectors of Gamma_p)`.
type StabilizerKey = (Subgroup, Subgroup, Vec<Vec<u64>>);

/// Groups classes by `(L, K, Gamma_p)`, then clusters by `C` and finally by
/// `T` against the first member of each cluster. Ids count clusters within
/// the enclosing group.
pub fn bucketize(ctx: &Context, invs: &[ClassInvariants]) -> Result<Vec<Bucket>> {
    let mut groups: BTreeMap<StabilizerKey, Vec<usize>> = BTreeMap::new();
    for (i, inv) in invs.iter().enumerate() {
        let gamma_key = inv.gamma_p.members.iter().map(|nu| nu.exps.clone()).collect();
        groups
            .entry((inv.l.clone(), inv.k.clone(), gamma_key))
            .or_default()
            .push(i);
    }
    let mut out = Vec::new();
    for ((l, k, _), idx) in groups {
        let mut c_clusters: Vec<Vec<usize>> = Vec::new();
        for i in idx {
            let mut placed = false;
            for cl in c_clusters.iter_mut() {
                if h2_equal(&invs[cl[0]].c, &invs[i].c)? {
                    cl.push(i);
                    placed = true;
                    break;
                }
            }
            if !placed {
                c_clusters.push(alloc::vec![i]);
            }
        }
        for (c_id, cl) in c_clusters.into_iter().enumerate() {
            let mut t_clusters: Vec<Vec<usize>> = Vec::new();
            for i in cl {
                let mut placed = false;
                for tc in t_clusters.iter_mut() {
                    if t_equal(ctx, &invs[tc[0]], &invs[i])? {
                        tc.push(i);
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    t_clusters.push(alloc::vec![i]);
                }
            }
            for (t_id, members) in t_clusters.into_iter().enumerate() {
                out.push(Bucket {
                    l: l.clone(),
                    k: k.clone(),
                    members,
                    c_id,
                    t_id,
                });
            }
        }
    }
    out.sort_by_key(|b| b.members[0]);
    Ok(out)
}

/// `sum over buckets of |G:L|^-1 |G:L|^-s f~ * partial`, with the division
/// carried out over the rationals and integrality checked at the end.
pub fn assemble(
    ctx: &Context,
    invs: &[ClassInvariants],
    buckets: &[Bucket],
    f_tildes: &[DirichletPoly],
) -> Result<DirichletPoly> {
    let mut acc: BTreeMap<u64, BigRational> = BTreeMap::new();
    for (b, f) in buckets.iter().zip(f_tildes) {
        let idx = (ctx.g.order() / b.l.order()) as u64;
        let term = f.mul(&b.partial(invs)).shift(idx);
        for (n, a) in term.terms() {
            let e = acc.entry(n).or_insert_with(BigRational::zero);
            *e += BigRational::new(a.clone(), BigInt::from(idx));
        }
    }
    let mut out = DirichletPoly::zero();
    for (n, a) in acc {
        if !a.is_integer() {
            return Err(Error::Internal(alloc::format!(
                "coefficient of {}^-s is not integral",
                n
            )));
        }
        out.add_term(n, a.to_integer());
    }
    Ok(out)
}

/// The full computation with its intermediate data.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub invariants: Vec<ClassInvariants>,
    pub buckets: Vec<Bucket>,
    pub f_tildes: Vec<DirichletPoly>,
    pub zeta: DirichletPoly,
}

/// Local tables keyed by the member list of `L`, built once per distinct `L`.
pub fn local_tables(ctx: &Context, ls: &[&Subgroup]) -> Result<BTreeMap<Vec<u32>, LocalTable>> {
    let mut out = BTreeMap::new();
    for l in ls {
        if !out.contains_key(l.members()) {
            out.insert(l.members().to_vec(), local_table(ctx, l)?);
        }
    }
    Ok(out)
}

pub fn twist_zeta(ctx: &Context) -> Result<Assembly> {
    let invariants = all_invariants(ctx, &BasisCache::new())?;
    let buckets = bucketize(ctx, &invariants)?;
    let ls: Vec<&Subgroup> = buckets.iter().map(|b| &b.l).collect();
    let tables = local_tables(ctx, &ls)?;
    let f_tildes: Vec<DirichletPoly> = buckets
        .iter()
        .map(|b| f_tilde(ctx, &tables[b.l.members()], invariants[b.members[0]].class))
        .collect();
    let zeta = assemble(ctx, &invariants, &buckets, &f_tildes)?;
    Ok(Assembly {
        invariants,
        buckets,
        f_tildes,
        zeta,
    })
}

/// Human-readable form used in reports, e.g. `1 + 2*3^-s`.
pub fn render(p: &DirichletPoly) -> String {
    alloc::format!("{}", p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::center;
    use crate::group::tests::{perm_group, q8, s3};

    #[test]
    fn polynomial_arithmetic() {
        let a = DirichletPoly::from_terms([(1, BigInt::one()), (2, BigInt::from(3))]);
        let b = DirichletPoly::term(3, BigInt::from(-1));
        let p = a.mul(&b);
        assert_eq!(p.coeff(3), BigInt::from(-1));
        assert_eq!(p.coeff(6), BigInt::from(-3));
        assert_eq!(render(&a.add(&b)), "1 + 3*2^-s - 3^-s");
        assert_eq!(render(&a.shift(2)), "2^-s + 3*4^-s");
        assert!(a
            .add(&DirichletPoly::from_terms([
                (1, BigInt::from(-1)),
                (2, BigInt::from(-3))
            ]))
            .is_zero());
        assert_eq!(a.count(), BigInt::from(4));
    }

    #[test]
    fn brute_values() {
        assert_eq!(render(&brute_twist_zeta(&q8()).unwrap()), "1 + 2^-s");
        assert_eq!(render(&brute_twist_zeta(&s3()).unwrap()), "1 + 2^-s");
        let t = character_table(&s3(), &Subgroup::whole(&s3())).unwrap();
        assert_eq!(render(&rep_zeta(&t)), "2 + 2^-s");
    }

    #[test]
    fn q8_assembles_over_center() {
        let g = q8();
        let z = center(&g);
        let ctx = Context::new(g.clone(), z, 2, 1).unwrap();
        let a = twist_zeta(&ctx).unwrap();
        assert_eq!(a.zeta, brute_twist_zeta(&g).unwrap());
        assert_eq!(a.buckets.len(), 2);
    }

    #[test]
    fn d4_assembles_over_itself() {
        let g = perm_group(4, &[&[&[1, 2, 3, 4]], &[&[1, 3]]]);
        let w = Subgroup::whole(&g);
        let ctx = Context::new(g.clone(), w, 2, 1).unwrap();
        assert_eq!(twist_zeta(&ctx).unwrap().zeta, brute_twist_zeta(&g).unwrap());
    }
}
