//! `G`-twist classes and the twisting group `Gamma`.
//!
//! Characters of a subgroup `H` are twisted by restrictions `psi|_H` of
//! `psi in Lin(G)`; the orbits are the `G`-twist classes of `Irr(H)`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::chars::{conj_character, induce, twist_values, CharTable, LinearCharacter};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// An orbit of `Irr(H)` under `Lin(G)`-twisting, as indices into the table
/// of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistClass {
    /// First member in table order.
    pub rep: usize,
    pub members: Vec<usize>,
    pub degree: u64,
}

/// Restrictions of `Lin(G)` to `h`, in the enumeration order of `lin_g`.
pub fn restrict_all(g: &FiniteGroup, lin_g: &[LinearCharacter], h: &Subgroup) -> Vec<LinearCharacter> {
    let whole = Subgroup::whole(g);
    lin_g.iter().map(|l| l.restrict(&whole, h)).collect()
}

/// Partition of `Irr(H)` into `G`-twist classes, ordered by representative.
pub fn twist_classes(g: &FiniteGroup, table: &CharTable, lin_g: &[LinearCharacter]) -> Vec<TwistClass> {
    let res = restrict_all(g, lin_g, &table.domain);
    let mut seen = alloc::vec![false; table.len()];
    let mut out = Vec::new();
    for i in 0..table.len() {
        if seen[i] {
            continue;
        }
        let mut members = BTreeSet::new();
        for psi in &res {
            let v = twist_values(&table.chars[i].values, psi);
            let j = table.find(&v).expect("a twist of an irreducible is irreducible");
            members.insert(j);
        }
        for &j in &members {
            seen[j] = true;
        }
        out.push(TwistClass {
            rep: i,
            members: members.into_iter().collect(),
            degree: table.chars[i].degree,
        });
    }
    out
}

/// Index of the twist class containing character `i`.
pub fn class_containing(classes: &[TwistClass], i: usize) -> usize {
    classes
        .iter()
        .position(|c| c.members.contains(&i))
        .expect("classes partition the table")
}

/// `K = Stab_G(theta)` and `L = Stab_G(twist class of theta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerData {
    pub k: Subgroup,
    pub l: Subgroup,
}

pub fn stabilizers(g: &FiniteGroup, table_n: &CharTable, class: &TwistClass) -> StabilizerData {
    let n = &table_n.domain;
    let theta = &table_n.chars[class.rep].values;
    let mut k = Vec::new();
    let mut l = Vec::new();
    for x in 0..g.order() {
        let c = conj_character(g, n, theta, x);
        if &c == theta {
            k.push(x as u32);
        }
        if let Some(j) = table_n.find(&c) {
            if class.members.contains(&j) {
                l.push(x as u32);
            }
        }
    }
    StabilizerData {
        k: Subgroup::from_closed_set(g, k),
        l: Subgroup::from_closed_set(g, l),
    }
}

/// First `psi` in `lin_g` with `^x theta = theta psi|_N`, as an index.
pub fn psi_for(
    g: &FiniteGroup,
    n: &Subgroup,
    theta: &[crate::cyclo::Cyclotomic],
    x: usize,
    res_n: &[LinearCharacter],
) -> Option<usize> {
    let c = conj_character(g, n, theta, x);
    res_n.iter().position(|psi| twist_values(theta, psi) == c)
}

/// Last match instead of the first; used to test independence of the choice.
pub fn psi_for_last(
    g: &FiniteGroup,
    n: &Subgroup,
    theta: &[crate::cyclo::Cyclotomic],
    x: usize,
    res_n: &[LinearCharacter],
) -> Option<usize> {
    let c = conj_character(g, n, theta, x);
    res_n.iter().rposition(|psi| twist_values(theta, psi) == c)
}

/// Twist class in `table2` (of `H'`) of the character induced from the
/// representative of `class` (of `H = table.domain`).
pub fn twist_induce(
    g: &FiniteGroup,
    table: &CharTable,
    class: &TwistClass,
    table2: &CharTable,
    classes2: &[TwistClass],
) -> Result<usize> {
    let v = induce(g, &table.domain, &table.chars[class.rep].values, &table2.domain);
    let j = table2
        .find(&v)
        .ok_or_else(|| Error::Input("induced character is reducible".into()))?;
    Ok(class_containing(classes2, j))
}

/// Linear characters of `k` trivial on `n`.
pub fn lin_quotient(g: &FiniteGroup, k: &Subgroup, n: &Subgroup) -> Vec<LinearCharacter> {
    crate::chars::linear_characters(g, k)
        .into_iter()
        .filter(|l| n.iter().all(|x| l.exps[k.position(x).unwrap()] % l.modulus == 0))
        .collect()
}

/// `Gamma` as a subgroup of `Lin(K/N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaGroup {
    pub k: Subgroup,
    pub members: Vec<LinearCharacter>,
    pub gens: Vec<LinearCharacter>,
}

impl GammaGroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, nu: &LinearCharacter) -> bool {
        self.members.binary_search(&nu.reduced()).is_ok()
    }

    /// The trivial subgroup of `Lin(K/N)`.
    pub fn trivial(k: &Subgroup) -> GammaGroup {
        GammaGroup {
            k: k.clone(),
            members: alloc::vec![LinearCharacter::trivial(k.order())],
            gens: Vec::new(),
        }
    }

    pub fn from_members(k: &Subgroup, mut members: Vec<LinearCharacter>) -> GammaGroup {
        for m in members.iter_mut() {
            *m = m.reduced();
        }
        members.sort();
        members.dedup();
        let gens = greedy_gens(&members);
        GammaGroup {
            k: k.clone(),
            members,
            gens,
        }
    }
}

/// Greedy generating set: members (in order) not yet in the span.
fn greedy_gens(members: &[LinearCharacter]) -> Vec<LinearCharacter> {
    let Some(first) = members.first() else {
        return Vec::new();
    };
    let mut span: BTreeSet<LinearCharacter> = BTreeSet::new();
    span.insert(LinearCharacter::trivial(first.exps.len()));
    let mut gens = Vec::new();
    for m in members {
        if span.contains(m) {
            continue;
        }
        gens.push(m.clone());
        // close the span under multiplication by the new generator
        let mut frontier: Vec<LinearCharacter> = span.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            let y = x.mul(m);
            if span.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    gens
}

/// `Gamma_{K,theta~} = { nu in Lin(K/N) : exists eps in Lin(G), eps = nu on supp }`
/// where `support[i]` marks the positions of `K` where a strong extension of
/// `theta` is nonzero.
pub fn gamma_group(
    g: &FiniteGroup,
    k: &Subgroup,
    n: &Subgroup,
    support: &[bool],
    lin_g: &[LinearCharacter],
) -> GammaGroup {
    let res_k = restrict_all(g, lin_g, k);
    let members = lin_quotient(g, k, n)
        .into_iter()
        .filter(|nu| {
            res_k
                .iter()
                .any(|eps| (0..k.order()).all(|i| !support[i] || nu.value(i) == eps.value(i)))
        })
        .collect();
    GammaGroup::from_members(k, members)
}

/// The pieces `Gamma^0_K`, `Gamma_(p)` and `Gamma_p` with the checks that
/// `Gamma = Gamma^0 x Gamma_(p)` and that restriction to `K_p` is injective
/// on `Gamma_(p)`.
#[derive(Clone, Debug)]
pub struct GammaStructure {
    pub gamma0: Vec<LinearCharacter>,
    pub gamma_ppart: Vec<LinearCharacter>,
    /// Restrictions to `K_p`.
    pub gamma_p: GammaGroup,
    pub splits: bool,
    pub injective: bool,
}

pub fn gamma_structure(
    g: &FiniteGroup,
    gamma: &GammaGroup,
    p: u64,
    kp: &Subgroup,
    lin_g: &[LinearCharacter],
) -> GammaStructure {
    let k = &gamma.k;
    let res_k: BTreeSet<LinearCharacter> = restrict_all(g, lin_g, k).into_iter().collect();
    let gamma0: Vec<LinearCharacter> = gamma
        .members
        .iter()
        .filter(|nu| res_k.contains(*nu) && nu.qpart(p).is_trivial())
        .cloned()
        .collect();
    let mut ppart: Vec<LinearCharacter> = gamma.members.iter().map(|nu| nu.qpart(p)).collect();
    ppart.sort();
    ppart.dedup();
    let ppart_in = ppart.iter().all(|x| gamma.contains(x));
    let meet_trivial = gamma0.iter().filter(|x| ppart.contains(x)).count() == 1;
    let mut products = BTreeSet::new();
    for a in &gamma0 {
        for b in &ppart {
            products.insert(a.mul(b));
        }
    }
    let splits =
        ppart_in && meet_trivial && products.len() == gamma.members.len() && products.iter().all(|x| gamma.contains(x));
    let restricted: Vec<LinearCharacter> = ppart.iter().map(|x| x.restrict(k, kp)).collect();
    let distinct: BTreeSet<&LinearCharacter> = restricted.iter().collect();
    let injective = distinct.len() == ppart.len();
    let all_restricted: Vec<LinearCharacter> = gamma.members.iter().map(|x| x.restrict(k, kp)).collect();
    let gamma_p = GammaGroup::from_members(kp, all_restricted);
    let image_ok = restricted.iter().all(|x| gamma_p.contains(x)) && distinct.len() == gamma_p.order();
    GammaStructure {
        gamma0,
        gamma_ppart: ppart,
        gamma_p,
        splits,
        injective: injective && image_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{character_table, linear_characters};
    use crate::group::center;
    use crate::group::tests::{c4, perm_group, q8};
    use alloc::vec;

    #[test]
    fn q8_classes() {
        let g = q8();
        let w = Subgroup::whole(&g);
        let lin = linear_characters(&g, &w);
        let t = character_table(&g, &w).unwrap();
        let cl = twist_classes(&g, &t, &lin);
        assert_eq!(cl.iter().map(|c| c.members.len()).collect::<Vec<_>>(), vec![4, 1]);
        let z = center(&g);
        let tz = character_table(&g, &z).unwrap();
        assert_eq!(twist_classes(&g, &tz, &lin).len(), 2);
    }

    #[test]
    fn c4_over_c2_single_class() {
        let g = c4();
        let lin = linear_characters(&g, &Subgroup::whole(&g));
        let two = (0..4).find(|&x| g.elem_order(x) == 2).unwrap();
        let n = Subgroup::closure(&g, &[two]);
        let t = character_table(&g, &n).unwrap();
        let cl = twist_classes(&g, &t, &lin);
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].members, vec![0, 1]);
    }

    #[test]
    fn d4_stabilizers_of_klein_characters() {
        let g = perm_group(4, &[&[&[1, 2, 3, 4]], &[&[1, 3]]]);
        let lin = linear_characters(&g, &Subgroup::whole(&g));
        // Klein four subgroup containing (1 3)
        let refl = (0..8)
            .find(|&x| {
                g.elem_order(x) == 2 && !center(&g).contains(x) && {
                    let s = Subgroup::closure(&g, &[x]).join(&g, &center(&g));
                    s.is_normal(&g) && s.order() == 4
                }
            })
            .unwrap();
        let v = Subgroup::closure(&g, &[refl]).join(&g, &center(&g));
        let t = character_table(&g, &v).unwrap();
        let cl = twist_classes(&g, &t, &lin);
        let mut index2 = 0;
        for c in &cl {
            let st = stabilizers(&g, &t, c);
            assert!(st.k.is_subgroup_of(&st.l));
            if c.rep == 0 {
                assert_eq!(st.k.order(), 8);
            }
            if st.k.order() == 4 {
                // the two characters nontrivial on the center are swapped by
                // a rotation and differ by a restricted linear character of D4
                index2 += 1;
                assert_eq!(c.members.len(), 2);
                assert_eq!(st.l.order(), 8);
            }
        }
        assert!(index2 > 0);
    }

    #[test]
    fn psi_for_choices() {
        let g = q8();
        let w = Subgroup::whole(&g);
        let lin = linear_characters(&g, &w);
        let i = (0..8).find(|&x| g.elem_order(x) == 4).unwrap();
        let c = Subgroup::closure(&g, &[i]);
        let res = restrict_all(&g, &lin, &c);
        let lc = linear_characters(&g, &c);
        let faithful = lc.iter().find(|l| l.modulus == 4).unwrap().to_values();
        let j = (0..8).find(|&x| !c.contains(x)).unwrap();
        // inversion equals twisting by the Lin(Q8) character with kernel <j>
        let psi = psi_for(&g, &c, &faithful, j, &res).unwrap();
        assert_eq!(conj_character(&g, &c, &faithful, j), twist_values(&faithful, &res[psi]));
        assert!(psi_for_last(&g, &c, &faithful, j, &res).is_some());
        assert_eq!(psi_for(&g, &c, &faithful, i, &res), Some(0));
    }

    #[test]
    fn gamma_q8_center() {
        let g = q8();
        let w = Subgroup::whole(&g);
        let z = center(&g);
        let lin = linear_characters(&g, &w);
        // the degree-2 character is supported on the center
        let support: Vec<bool> = w.iter().map(|x| z.contains(x)).collect();
        let gam = gamma_group(&g, &w, &z, &support, &lin);
        assert_eq!(gam.order(), 4);
        let st = gamma_structure(&g, &gam, 2, &w, &lin);
        assert!(st.splits && st.injective);
        assert_eq!(st.gamma0.len(), 1);
        // theta trivial with K = N
        let gz = gamma_group(&g, &z, &z, &[true, true], &lin);
        assert_eq!(gz.order(), 1);
    }
}
