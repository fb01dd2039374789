//! Built-in groups, each with its designated normal subgroup and prime.

use twistzeta_core::group::{
    center, cycle_notation, images_to_cycles, sylow_over, FiniteGroup, GroupSpec, Subgroup, DEFAULT_SIZE_CAP,
};

/// How the normal subgroup of an entry is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Normal {
    Center,
    Whole,
    /// The subgroup generated by all squares.
    Squares,
    /// The Sylow subgroup for the entry's prime (normal in these groups).
    Sylow,
    /// The Klein four-group of double transpositions on the first four points.
    Klein,
}

struct Spec {
    name: &'static str,
    about: &'static str,
    points: usize,
    gens: fn() -> Vec<Vec<u32>>,
    normal: Normal,
    p: u64,
}

/// A corpus group with its data resolved.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub about: &'static str,
    pub spec: GroupSpec,
    pub group: FiniteGroup,
    pub normal: Subgroup,
    pub p: u64,
}

fn from_fn(points: usize, f: impl Fn(usize) -> usize) -> Vec<u32> {
    (0..points).map(|x| f(x) as u32).collect()
}

fn cycles(points: usize, cs: &[&[usize]]) -> Vec<u32> {
    let mut img: Vec<u32> = (0..points as u32).collect();
    for c in cs {
        for (i, &x) in c.iter().enumerate() {
            img[x - 1] = (c[(i + 1) % c.len()] - 1) as u32;
        }
    }
    img
}

fn q8_gens() -> Vec<Vec<u32>> {
    vec![
        cycles(8, &[&[1, 2, 3, 4], &[5, 6, 7, 8]]),
        cycles(8, &[&[1, 5, 3, 7], &[2, 8, 4, 6]]),
    ]
}

/// Affine maps of `F_3^2`, point `(x, y)` numbered `x + 3y`.
fn heis27_gens() -> Vec<Vec<u32>> {
    let pt = |x: usize, y: usize| (x % 3) + 3 * (y % 3);
    vec![
        from_fn(9, |v| pt(v % 3 + 1, v / 3)),
        from_fn(9, |v| pt(v % 3, v / 3 + v % 3)),
    ]
}

fn ext27_gens() -> Vec<Vec<u32>> {
    vec![from_fn(9, |x| (x + 1) % 9), from_fn(9, |x| (4 * x) % 9)]
}

/// `SL(2,3)` acting on the eight nonzero vectors of `F_3^2`.
fn sl23_gens() -> Vec<Vec<u32>> {
    let vecs: Vec<(usize, usize)> = (0..9).map(|v| (v % 3, v / 3)).filter(|&v| v != (0, 0)).collect();
    let act = |m: [usize; 4]| {
        from_fn(8, |i| {
            let (a, b) = vecs[i];
            let img = ((m[0] * a + m[1] * b) % 3, (m[2] * a + m[3] * b) % 3);
            vecs.iter().position(|&v| v == img).unwrap()
        })
    };
    vec![act([1, 1, 0, 1]), act([1, 0, 1, 1])]
}

const SPECS: &[Spec] = &[
    Spec {
        name: "c4",
        about: "cyclic of order 4 over its subgroup of order 2",
        points: 4,
        gens: || vec![cycles(4, &[&[1, 2, 3, 4]])],
        normal: Normal::Squares,
        p: 2,
    },
    Spec {
        name: "d4",
        about: "dihedral of order 8 over its center",
        points: 4,
        gens: || vec![cycles(4, &[&[1, 2, 3, 4]]), cycles(4, &[&[1, 3]])],
        normal: Normal::Center,
        p: 2,
    },
    Spec {
        name: "q8",
        about: "quaternion of order 8 over its center",
        points: 8,
        gens: q8_gens,
        normal: Normal::Center,
        p: 2,
    },
    Spec {
        name: "heis27",
        about: "Heisenberg group of order 27 over its center",
        points: 9,
        gens: heis27_gens,
        normal: Normal::Center,
        p: 3,
    },
    Spec {
        name: "heis27-self",
        about: "Heisenberg group of order 27 over itself",
        points: 9,
        gens: heis27_gens,
        normal: Normal::Whole,
        p: 3,
    },
    Spec {
        name: "ext27",
        about: "extraspecial group of order 27 and exponent 9 over its center",
        points: 9,
        gens: ext27_gens,
        normal: Normal::Center,
        p: 3,
    },
    Spec {
        name: "ext27-self",
        about: "extraspecial group of order 27 and exponent 9 over itself",
        points: 9,
        gens: ext27_gens,
        normal: Normal::Whole,
        p: 3,
    },
    Spec {
        name: "c2xq8",
        about: "C2 x Q8 over its center",
        points: 10,
        gens: || {
            let mut g: Vec<Vec<u32>> = q8_gens()
                .into_iter()
                .map(|mut v| {
                    v.extend([8, 9]);
                    v
                })
                .collect();
            g.push(cycles(10, &[&[9, 10]]));
            g
        },
        normal: Normal::Center,
        p: 2,
    },
    Spec {
        name: "m16",
        about: "modular group of order 16 over its center",
        points: 8,
        gens: || vec![from_fn(8, |x| (x + 1) % 8), from_fn(8, |x| (5 * x) % 8)],
        normal: Normal::Center,
        p: 2,
    },
    Spec {
        name: "sl23",
        about: "SL(2,3) over its quaternion subgroup",
        points: 8,
        gens: sl23_gens,
        normal: Normal::Sylow,
        p: 2,
    },
    Spec {
        name: "s3",
        about: "symmetric group on 3 points over its alternating subgroup",
        points: 3,
        gens: || vec![cycles(3, &[&[1, 2, 3]]), cycles(3, &[&[1, 2]])],
        normal: Normal::Sylow,
        p: 3,
    },
    Spec {
        name: "a4",
        about: "alternating group on 4 points over the Klein four-group",
        points: 4,
        gens: || vec![cycles(4, &[&[1, 2, 3]]), cycles(4, &[&[1, 2], &[3, 4]])],
        normal: Normal::Klein,
        p: 2,
    },
    Spec {
        name: "s4",
        about: "symmetric group on 4 points over the Klein four-group",
        points: 4,
        gens: || vec![cycles(4, &[&[1, 2, 3, 4]]), cycles(4, &[&[1, 2]])],
        normal: Normal::Klein,
        p: 2,
    },
];

pub fn names() -> Vec<&'static str> {
    SPECS.iter().map(|s| s.name).collect()
}

pub fn load(name: &str) -> Option<CorpusEntry> {
    let s = SPECS.iter().find(|s| s.name == name)?;
    let gens = (s.gens)().iter().map(|img| images_to_cycles(img)).collect();
    let spec = GroupSpec::Permutations { points: s.points, gens };
    let group = FiniteGroup::from_spec(&spec, DEFAULT_SIZE_CAP).expect("corpus groups are valid");
    let whole = Subgroup::whole(&group);
    let normal = match s.normal {
        Normal::Center => center(&group),
        Normal::Whole => whole,
        Normal::Squares => {
            let sq: Vec<usize> = (0..group.order()).map(|x| group.mul(x, x)).collect();
            Subgroup::closure(&group, &sq)
        }
        Normal::Sylow => {
            let triv = Subgroup::trivial(&group);
            sylow_over(&group, &triv, &whole, s.p)
        }
        Normal::Klein => {
            let gens: Vec<usize> = [
                cycles(s.points, &[&[1, 2], &[3, 4]]),
                cycles(s.points, &[&[1, 3], &[2, 4]]),
            ]
            .iter()
            .map(|img| {
                let label = cycle_notation(img);
                (0..group.order())
                    .find(|&x| group.label(x) == label)
                    .expect("double transposition lies in the group")
            })
            .collect();
            Subgroup::closure(&group, &gens)
        }
    };
    Some(CorpusEntry {
        name: s.name,
        about: s.about,
        spec,
        group,
        normal,
        p: s.p,
    })
}

pub fn all() -> Vec<CorpusEntry> {
    names().into_iter().map(|n| load(n).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_normal_subgroups() {
        let want = [
            ("c4", 4, 2),
            ("d4", 8, 2),
            ("q8", 8, 2),
            ("heis27", 27, 3),
            ("heis27-self", 27, 27),
            ("ext27", 27, 3),
            ("ext27-self", 27, 27),
            ("c2xq8", 16, 4),
            ("m16", 16, 4),
            ("sl23", 24, 8),
            ("s3", 6, 3),
            ("a4", 12, 4),
            ("s4", 24, 4),
        ];
        for (name, order, n) in want {
            let e = load(name).unwrap();
            assert_eq!(e.group.order(), order, "{}", name);
            assert_eq!(e.normal.order(), n, "{}", name);
            assert!(e.normal.is_normal(&e.group));
        }
        assert_eq!(load("ext27").unwrap().group.exponent(), 9);
        assert_eq!(load("heis27").unwrap().group.exponent(), 3);
        assert!(load("nope").is_none());
    }
}
