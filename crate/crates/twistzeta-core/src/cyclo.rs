//! Exact arithmetic in cyclotomic fields `Q(z_M)` and in the group of roots
//! of unity.
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(M)-1)` reduced
//! modulo the `M`-th cyclotomic polynomial, with a single positive common
//! denominator. Two elements with different moduli are compared and combined
//! after rebasing both to the lcm of the moduli.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicPtr, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus whose field data is memoised process-wide.
const FIELD_CACHE: usize = 2048;

/// Per-modulus data: the cyclotomic polynomial and the reductions of
/// `x^k` for `0 <= k < M`.
pub(crate) struct Field {
    deg: usize,
    /// `pow_red[k]` holds the coordinates of `z^k`.
    pow_red: Vec<Vec<i64>>,
}

static FIELDS: [AtomicPtr<Field>; FIELD_CACHE] = [const { AtomicPtr::new(core::ptr::null_mut()) }; FIELD_CACHE];

fn field(m: u64) -> &'static Field {
    let idx = m as usize;
    if idx < FIELD_CACHE {
        let p = FIELDS[idx].load(Ordering::Acquire);
        if !p.is_null() {
            // SAFETY: non-null pointers stored here come from `Box::leak` and
            // are never freed.
            return unsafe { &*p };
        }
        let fresh = Box::into_raw(Box::new(Field::build(m)));
        match FIELDS[idx].compare_exchange(core::ptr::null_mut(), fresh, Ordering::AcqRel, Ordering::Acquire) {
            // SAFETY: we just published `fresh`; it lives for the rest of the process.
            Ok(_) => unsafe { &*fresh },
            Err(existing) => {
                // SAFETY: `fresh` was never shared, so we still own it.
                unsafe { drop(Box::from_raw(fresh)) };
                // SAFETY: as above for the published pointer.
                unsafe { &*existing }
            }
        }
    } else {
        Box::leak(Box::new(Field::build(m)))
    }
}

/// Euler's totient.
pub fn phi(m: u64) -> u64 {
    let mut n = m;
    let mut r = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// True when `n` is prime.
pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

/// The `q`-part of `n`.
pub fn prime_part(n: u64, q: u64) -> u64 {
    let mut n = n;
    let mut r = 1;
    while n > 0 && n.is_multiple_of(q) {
        n /= q;
        r *= q;
    }
    r
}

fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of `a` by the monic polynomial `x^d - 1`.
fn div_xd_minus_one(a: &[i64], d: usize) -> Vec<i64> {
    let mut rem = a.to_vec();
    let n = a.len() - 1;
    let mut q = vec![0i64; n - d + 1];
    for i in (d..=n).rev() {
        let c = rem[i];
        q[i - d] = c;
        rem[i] = 0;
        rem[i - d] += c;
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// Coefficients (low to high) of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    let mut num = vec![1i64];
    let mut dens = Vec::new();
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        let mut f = vec![0i64; d as usize + 1];
        f[0] = -1;
        f[d as usize] = 1;
        match mobius(m / d) {
            1 => num = poly_mul(&num, &f),
            -1 => dens.push(d as usize),
            _ => {}
        }
    }
    for d in dens {
        num = div_xd_minus_one(&num, d);
    }
    num
}

impl Field {
    fn build(m: u64) -> Field {
        let poly = cyclotomic_poly(m);
        let deg = poly.len() - 1;
        let mut pow_red = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; deg];
        cur[0] = 1;
        for _ in 0..m {
            pow_red.push(cur.clone());
            // multiply by x and reduce with the monic relation
            let top = cur[deg - 1];
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1] - top * poly[i];
            }
            cur[0] = -top * poly[0];
        }
        Field { deg, pow_red }
    }
}

/// An exact element of `Q(z_M)`.
#[derive(Clone)]
pub struct Cyclotomic {
    m: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

/// A root of unity `z_M^k`, kept with `gcd(M, k) = 1` (and `M = 1` for one).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    m: u64,
    k: u64,
}

impl Cyclotomic {
    fn from_parts(m: u64, num: Vec<BigInt>, den: BigInt) -> Cyclotomic {
        let mut c = Cyclotomic { m, num, den };
        c.normalize_den();
        c
    }

    fn normalize_den(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for x in &mut self.num {
                *x = -x.clone();
            }
        }
        let mut g = self.den.clone();
        for x in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if !g.is_one() && !g.is_zero() {
            self.den /= &g;
            for x in &mut self.num {
                *x /= &g;
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
        }
    }

    /// Canonical representative of the polynomial `sum raw[k] x^k` in `Q(z_M)`.
    pub fn normalize(m: u64, raw: &[BigRational]) -> Result<Cyclotomic> {
        if m == 0 {
            return Err(Error::Input("cyclotomic modulus must be positive".into()));
        }
        let f = field(m);
        let mut den = BigInt::one();
        for r in raw {
            den = den.lcm(r.denom());
        }
        let mut num = vec![BigInt::zero(); f.deg];
        for (k, r) in raw.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let scaled = r.numer() * (&den / r.denom());
            for (j, &c) in f.pow_red[k % m as usize].iter().enumerate() {
                if c != 0 {
                    num[j] += &scaled * c;
                }
            }
        }
        Ok(Cyclotomic::from_parts(m, num, den))
    }

    /// Builds an element from integer exponent multiplicities: `sum mult[k] z_M^k`.
    pub fn from_exponent_counts(m: u64, mult: &[i64]) -> Cyclotomic {
        let f = field(m);
        let mut acc = vec![0i64; f.deg];
        for (k, &c) in mult.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, &v) in f.pow_red[k % m as usize].iter().enumerate() {
                acc[j] += c * v;
            }
        }
        Cyclotomic::from_parts(m, acc.into_iter().map(BigInt::from).collect(), BigInt::one())
    }

    pub fn zero() -> Cyclotomic {
        Cyclotomic {
            m: 1,
            num: vec![BigInt::zero()],
            den: BigInt::one(),
        }
    }

    pub fn one() -> Cyclotomic {
        Cyclotomic::from_int(1)
    }

    pub fn from_int(v: i64) -> Cyclotomic {
        Cyclotomic {
            m: 1,
            num: vec![BigInt::from(v)],
            den: BigInt::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Cyclotomic {
        Cyclotomic::from_parts(1, vec![r.numer().clone()], r.denom().clone())
    }

    /// `z_M^k` as a field element.
    pub fn root_of_unity(m: u64, k: u64) -> Cyclotomic {
        let f = field(m);
        let row = &f.pow_red[(k % m) as usize];
        Cyclotomic {
            m,
            num: row.iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// Power-basis coordinates as rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|x| BigRational::new(x.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// The integer value when the element is a rational integer.
    pub fn to_i64(&self) -> Option<i64> {
        let r = self.to_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Re-expresses the element over `Q(z_target)`; `M` must divide `target`.
    pub fn rebase(&self, target: u64) -> Cyclotomic {
        if target == self.m {
            return self.clone();
        }
        assert!(
            target.is_multiple_of(self.m),
            "rebase target must be a multiple of the modulus"
        );
        let step = target / self.m;
        let f = field(target);
        let mut num = vec![BigInt::zero(); f.deg];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (i as u64 * step) % target;
            for (j, &v) in f.pow_red[e as usize].iter().enumerate() {
                if v != 0 {
                    num[j] += c * v;
                }
            }
        }
        Cyclotomic {
            m: target,
            num,
            den: self.den.clone(),
        }
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        if a.m == b.m {
            (a.clone(), b.clone())
        } else {
            let l = a.m.lcm(&b.m);
            (a.rebase(l), b.rebase(l))
        }
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add_scaled(other, -1)
    }

    fn add_scaled(&self, other: &Cyclotomic, sign: i64) -> Cyclotomic {
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = Cyclotomic::common(self, other);
        let den = a.den.lcm(&b.den);
        let fa = &den / &a.den;
        let fb = &den / &b.den * sign;
        let num = a.num.iter().zip(b.num.iter()).map(|(x, y)| x * &fa + y * &fb).collect();
        Cyclotomic::from_parts(a.m, num, den)
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            m: self.m,
            num: self.num.iter().map(|x| -x).collect(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || other.is_zero() {
            return Cyclotomic::zero();
        }
        let (a, b) = Cyclotomic::common(self, other);
        let m = a.m as usize;
        let f = field(a.m);
        // cyclic convolution modulo x^m - 1, then reduce each power
        let mut conv = vec![BigInt::zero(); m];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                conv[(i + j) % m] += x * y;
            }
        }
        let mut num = vec![BigInt::zero(); f.deg];
        for (k, c) in conv.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, &v) in f.pow_red[k].iter().enumerate() {
                if v != 0 {
                    num[j] += c * v;
                }
            }
        }
        Cyclotomic::from_parts(a.m, num, &a.den * &b.den)
    }

    pub fn mul_int(&self, k: i64) -> Cyclotomic {
        Cyclotomic::from_parts(self.m, self.num.iter().map(|x| x * k).collect(), self.den.clone())
    }

    pub fn div_int(&self, k: i64) -> Cyclotomic {
        assert!(k != 0, "division by zero");
        Cyclotomic::from_parts(self.m, self.num.clone(), &self.den * k)
    }

    /// The Galois automorphism `z_M -> z_M^a`, `gcd(a, M) = 1`.
    pub fn galois(&self, a: u64) -> Cyclotomic {
        let m = self.m;
        let f = field(m);
        let mut num = vec![BigInt::zero(); f.deg];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (i as u64 * a) % m;
            for (j, &v) in f.pow_red[e as usize].iter().enumerate() {
                if v != 0 {
                    num[j] += c * v;
                }
            }
        }
        Cyclotomic {
            m,
            num,
            den: self.den.clone(),
        }
    }

    /// Complex conjugation `z -> z^-1`.
    pub fn conj(&self) -> Cyclotomic {
        self.galois(self.m.saturating_sub(1).max(1))
    }

    /// Multiplicative inverse via the product of the nontrivial Galois conjugates.
    pub fn inv(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.m;
        let mut others = Cyclotomic::one();
        for a in 2..m.max(2) {
            if a.gcd(&m) == 1 {
                others = others.mul(&self.galois(a));
            }
        }
        let norm = self.mul(&others);
        let n = norm.to_rational().expect("field norm is rational");
        let inv_n = Cyclotomic::from_rational(&n.recip());
        Ok(others.mul(&inv_n))
    }

    pub fn div(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Cyclotomic> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclotomic::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Lexicographic comparison of coordinates after rebasing both to `m`.
    pub fn cmp_at(&self, other: &Cyclotomic, m: u64) -> core::cmp::Ordering {
        let a = self.rebase(m);
        let b = other.rebase(m);
        for (x, y) in a.num.iter().zip(b.num.iter()) {
            let lhs = x * &b.den;
            let rhs = y * &a.den;
            match lhs.cmp(&rhs) {
                core::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        core::cmp::Ordering::Equal
    }

    /// The root of unity equal to `self`, searched among the `lcm(M, 2)`-th roots.
    pub fn as_root_of_unity(&self) -> Option<RootOfUnity> {
        if !self.den.is_one() {
            return None;
        }
        let target = self.m.lcm(&2);
        let c = self.rebase(target);
        let f = field(target);
        for k in 0..target {
            let row = &f.pow_red[k as usize];
            if row.iter().zip(c.num.iter()).all(|(&v, x)| *x == BigInt::from(v)) {
                return Some(RootOfUnity::new(target, k));
            }
        }
        None
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Cyclotomic) -> bool {
        if self.m == other.m {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = Cyclotomic::common(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = BigRational::new(c.clone(), self.den.clone());
            parts.push(if i == 0 {
                alloc::format!("{}", r)
            } else {
                alloc::format!("{}*z{}^{}", r, self.m, i)
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl RootOfUnity {
    /// `z_m^k`, stored in lowest terms.
    pub fn new(m: u64, k: u64) -> RootOfUnity {
        assert!(m > 0, "root of unity modulus must be positive");
        let k = k % m;
        if k == 0 {
            return RootOfUnity { m: 1, k: 0 };
        }
        let g = k.gcd(&m);
        RootOfUnity { m: m / g, k: k / g }
    }

    pub fn one() -> RootOfUnity {
        RootOfUnity { m: 1, k: 0 }
    }

    /// Order-`m` representation data: the root is `z_m^k`.
    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    /// The multiplicative order.
    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn is_one(&self) -> bool {
        self.m == 1
    }

    /// Exponent of this root in `z_n`; `n` must be a multiple of the order.
    pub fn exponent_in(&self, n: u64) -> u64 {
        assert!(n.is_multiple_of(self.m), "modulus does not contain this root of unity");
        self.k * (n / self.m)
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let l = self.m.lcm(&other.m);
        RootOfUnity::new(l, self.exponent_in(l) + other.exponent_in(l))
    }

    pub fn inv(&self) -> RootOfUnity {
        RootOfUnity::new(self.m, self.m - self.k)
    }

    pub fn pow(&self, e: i64) -> RootOfUnity {
        let m = self.m as i128;
        let k = ((self.k as i128 * e as i128) % m + m) % m;
        RootOfUnity::new(self.m, k as u64)
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.m, self.k)
    }

    /// The `q`-primary component under the CRT splitting of the order.
    pub fn qpart(&self, q: u64) -> RootOfUnity {
        let qa = prime_part(self.m, q);
        if qa == 1 {
            return RootOfUnity::one();
        }
        let rest = self.m / qa;
        // z_m^k = z_qa^x * z_rest^y with k = x*rest + y*qa (mod m)
        let inv = mod_inverse(rest % qa, qa).expect("coprime parts");
        let x = (self.k % qa) * inv % qa;
        RootOfUnity::new(qa, x)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}^{}", self.m, self.k)
    }
}

/// `rou_qpart`: the `q`-primary component of `w`.
pub fn rou_qpart(w: &RootOfUnity, q: u64) -> RootOfUnity {
    w.qpart(q)
}

/// Inverse of `a` modulo `n` when it exists.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut t, mut newt) = (0i128, 1i128);
    let (mut r, mut newr) = (n as i128, (a % n) as i128);
    while newr != 0 {
        let q = r / newr;
        (t, newt) = (newt, t - q * newt);
        (r, newr) = (newr, r - q * newr);
    }
    if r != 1 {
        return None;
    }
    if t < 0 {
        t += n as i128;
    }
    Some(t as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Brute-force oracle: multiply in Q[x]/(x^M - 1) and reduce.
    fn brute_mul(m: u64, a: &[i64], b: &[i64]) -> Vec<i64> {
        let m = m as usize;
        let mut out = vec![0i64; m];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[(i + j) % m] += x * y;
            }
        }
        out
    }

    #[test]
    fn cyclotomic_polynomials_are_classical() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        for m in 1..60 {
            assert_eq!(cyclotomic_poly(m).len() as u64 - 1, phi(m));
        }
    }

    #[test]
    fn normalize_basis_element() {
        let z = Cyclotomic::normalize(4, &[r(0), r(1), r(0), r(0)]).unwrap();
        assert_eq!(z.coeffs(), vec![r(0), r(1)]);
    }

    #[test]
    fn normalize_uses_cyclotomic_relation() {
        let v = Cyclotomic::normalize(3, &[r(-1), r(-1), r(0)]).unwrap();
        assert_eq!(v, Cyclotomic::root_of_unity(3, 2));
    }

    #[test]
    fn normalize_matches_brute_force_reduction() {
        // (1 + z5)(1 + z5^4) computed in Q[x]/(x^5-1), then reduced.
        let prod = brute_mul(5, &[1, 1, 0, 0, 0], &[1, 0, 0, 0, 1]);
        let raw: Vec<BigRational> = prod.iter().map(|&x| r(x)).collect();
        let lhs = Cyclotomic::normalize(5, &raw).unwrap();
        let a = Cyclotomic::one().add(&Cyclotomic::root_of_unity(5, 1));
        let b = Cyclotomic::one().add(&Cyclotomic::root_of_unity(5, 4));
        assert_eq!(lhs, a.mul(&b));
        assert!(Cyclotomic::normalize(0, &[]).is_err());
    }

    #[test]
    fn field_ops_examples() {
        let z8 = Cyclotomic::root_of_unity(8, 1);
        assert_eq!(z8.mul(&z8), Cyclotomic::root_of_unity(4, 1));
        assert_eq!(Cyclotomic::root_of_unity(3, 1).conj(), Cyclotomic::root_of_unity(3, 2));
        // 1 + z + ... + z^4 - 1 summed root by root is -1 + ... recomputed
        let mut s = Cyclotomic::zero();
        for k in 0..5 {
            s = s.add(&Cyclotomic::root_of_unity(5, k));
        }
        assert!(s.is_zero());
        let q = s.div(&Cyclotomic::from_int(7)).unwrap();
        assert!(q.is_zero());
        assert!(Cyclotomic::one().div(&s).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Cyclotomic::from_int(2).add(&Cyclotomic::root_of_unity(12, 5));
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
    }

    #[test]
    fn qpart_examples() {
        let w = RootOfUnity::new(12, 1);
        let two = rou_qpart(&w, 2);
        let three = rou_qpart(&w, 3);
        assert_eq!(two.order(), 4);
        assert_eq!(three.order(), 3);
        assert_eq!(two.mul(&three), w);
        // brute force over 4th and 3rd roots for the CRT decomposition
        let mut found = None;
        for a in 0..4 {
            for b in 0..3 {
                if RootOfUnity::new(4, a).mul(&RootOfUnity::new(3, b)) == w {
                    found = Some((a, b));
                }
            }
        }
        let (a, b) = found.unwrap();
        assert_eq!(two, RootOfUnity::new(4, a));
        assert_eq!(three, RootOfUnity::new(3, b));
        assert!(rou_qpart(&RootOfUnity::new(9, 1), 2).is_one());
        assert!(rou_qpart(&RootOfUnity::one(), 5).is_one());
    }

    #[test]
    fn as_root_of_unity_examples() {
        assert_eq!(
            Cyclotomic::root_of_unity(4, 1).as_root_of_unity(),
            Some(RootOfUnity::new(4, 1))
        );
        assert_eq!(Cyclotomic::from_int(2).as_root_of_unity(), None);
        let minus_z3 = Cyclotomic::root_of_unity(3, 1).neg();
        let mut expected = None;
        for k in 0..6 {
            if Cyclotomic::root_of_unity(6, k) == minus_z3 {
                expected = Some(RootOfUnity::new(6, k));
            }
        }
        assert_eq!(minus_z3.as_root_of_unity(), expected);
        assert_eq!(expected, Some(RootOfUnity::new(6, 5)));
    }

    fn arb_cyc() -> impl Strategy<Value = Cyclotomic> {
        (
            prop::sample::select(vec![1u64, 3, 4, 5, 8, 9, 12]),
            prop::collection::vec(-4i64..5, 1..6),
            1i64..4,
        )
            .prop_map(|(m, cs, d)| {
                let raw: Vec<BigRational> = cs.iter().map(|&c| BigRational::new(c.into(), d.into())).collect();
                Cyclotomic::normalize(m, &raw).unwrap()
            })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
            if !b.is_zero() {
                prop_assert_eq!(a.div(&b).unwrap().mul(&b), a.clone());
            }
        }

        #[test]
        fn qparts_are_orthogonal(m in 1u64..200, k in 0u64..200, q1 in prop::sample::select(vec![2u64, 3, 5, 7]), q2 in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let w = RootOfUnity::new(m, k);
            if q1 != q2 {
                prop_assert!(rou_qpart(&rou_qpart(&w, q1), q2).is_one());
            }
            let mut prod = RootOfUnity::one();
            for (q, _) in factorize(w.order()) {
                let part = rou_qpart(&w, q);
                prop_assert_eq!(rou_qpart(&part, q), part);
                prod = prod.mul(&part);
            }
            prop_assert_eq!(prod, w);
        }

        #[test]
        fn conj_is_inverse_on_roots(m in 1u64..60, k in 0u64..60) {
            let w = RootOfUnity::new(m, k);
            prop_assert_eq!(w.to_cyclotomic().conj(), w.inv().to_cyclotomic());
            prop_assert_eq!(w.to_cyclotomic().as_root_of_unity(), Some(w));
        }
    }
}
