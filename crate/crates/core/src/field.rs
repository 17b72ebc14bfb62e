//! Exact arithmetic in prime fields `F_p` and extensions `F_{p^k}`.
//!
//! Elements are stored in the polynomial basis of a validated monic
//! irreducible modulus. Every element carries a handle to its field
//! descriptor; mixing elements of different fields is a hard error, never an
//! implicit coercion.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

/// Inline capacity for coefficient vectors; k <= 4 covers every field the
/// library constructs by default.
type Coeffs = SmallVec<[u64; 4]>;

pub const MAX_EXTENSION_DEGREE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrime(u64),
    #[error("extension degree {0} out of range (1..={MAX_EXTENSION_DEGREE})")]
    BadDegree(usize),
    #[error("modulus is not monic of degree {0}")]
    BadModulus(usize),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("no built-in irreducible of degree {k} over F_{p}; supply a modulus")]
    NoDefaultModulus { p: u64, k: usize },
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("square roots are only computed in characteristic 2")]
    SqrtNeedsCharTwo,
    #[error("no primitive cube root of unity: 3 does not divide {order} - 1")]
    NoCubeRoot { order: u128 },
    #[error("field too large to enumerate")]
    FieldTooLarge,
    #[error("cannot parse field element `{0}`")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// word-size modular arithmetic
// ---------------------------------------------------------------------------

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, a != 0 mod p
    pow_mod(a, p - 2, p)
}

// ---------------------------------------------------------------------------
// dense univariate polynomials over F_p (helper layer for the modulus)
// ---------------------------------------------------------------------------

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(ai, bj, p)) % p;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], lead_inv, p);
        if c != 0 {
            let shift = dr - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = mul_mod(c, mi, p);
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, p);
        for c in &mut a {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

fn poly_powmod_x(pk: u128, m: &[u64], p: u64) -> Vec<u64> {
    // x^(pk) mod m by square-and-multiply on the exponent bits
    let mut result = vec![1u64];
    let mut base = poly_rem(&[0, 1], m, p);
    let mut e = pk;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    result
}

/// Rabin's irreducibility test for a monic polynomial of degree k over F_p.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    // x^(p^k) == x mod m
    let pk = (p as u128).pow(k as u32);
    let xq = poly_powmod_x(pk, m, p);
    let mut x_poly = poly_rem(&[0, 1], m, p);
    if xq != x_poly {
        return false;
    }
    // for each prime divisor q of k: gcd(x^(p^(k/q)) - x, m) == 1
    let mut rest = k;
    let mut q = 2;
    let mut prime_divisors = Vec::new();
    while q * q <= rest {
        if rest.is_multiple_of(q) {
            prime_divisors.push(q);
            while rest.is_multiple_of(q) {
                rest /= q;
            }
        }
        q += 1;
    }
    if rest > 1 {
        prime_divisors.push(rest);
    }
    for q in prime_divisors {
        let e = (p as u128).pow((k / q) as u32);
        let mut diff = poly_powmod_x(e, m, p);
        // diff -= x
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        let g = poly_gcd(&diff, m, p);
        if g.len() != 1 {
            return false;
        }
    }
    x_poly.clear();
    true
}

/// Built-in irreducible moduli, ascending coefficients (constant first).
fn default_modulus(p: u64, k: usize) -> Option<Vec<u64>> {
    match (p, k) {
        (_, 1) => Some(vec![0, 1]),
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        (2, 5) => Some(vec![1, 0, 1, 0, 0, 1]),
        (2, 6) => Some(vec![1, 1, 0, 0, 0, 0, 1]),
        (2, 7) => Some(vec![1, 1, 0, 0, 0, 0, 0, 1]),
        (2, 8) => Some(vec![1, 1, 0, 1, 1, 0, 0, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        (3, 3) => Some(vec![1, 2, 0, 1]),
        (3, 4) => Some(vec![2, 1, 0, 0, 1]),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// FieldDesc
// ---------------------------------------------------------------------------

/// Descriptor of `F_{p^k}` given by a monic irreducible modulus of degree k.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    p: u64,
    k: usize,
    /// Ascending coefficients, length k + 1, leading coefficient 1.
    modulus: Vec<u64>,
}

impl FieldDesc {
    /// Validated constructor. `modulus` coefficients are ascending; when
    /// omitted, a built-in irreducible is used (shipped for p=2, k<=8 and
    /// p=3, k<=4; every p with k=1).
    pub fn new(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Arc<FieldDesc>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if k == 0 || k > MAX_EXTENSION_DEGREE {
            return Err(FieldError::BadDegree(k));
        }
        let modulus = match modulus {
            Some(mut m) => {
                for c in &mut m {
                    *c %= p;
                }
                poly_trim(&mut m);
                if m.len() != k + 1 || m[k] != 1 {
                    return Err(FieldError::BadModulus(k));
                }
                if !is_irreducible(&m, p) {
                    return Err(FieldError::ReducibleModulus(p));
                }
                m
            }
            None => default_modulus(p, k).ok_or(FieldError::NoDefaultModulus { p, k })?,
        };
        Ok(Arc::new(FieldDesc { p, k, modulus }))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// p^k as u128.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElem {
        FieldElem {
            desc: Arc::clone(self),
            coeffs: std::iter::repeat_n(0, self.k).collect(),
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElem {
        self.from_int(1)
    }

    /// The residue class of the modulus variable (requires k >= 2).
    pub fn generator(self: &Arc<Self>) -> FieldElem {
        assert!(self.k >= 2, "generator needs an extension field");
        let mut coeffs: Coeffs = std::iter::repeat_n(0, self.k).collect();
        coeffs[1] = 1;
        FieldElem {
            desc: Arc::clone(self),
            coeffs,
        }
    }

    /// Lift of an integer into the prime subfield.
    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElem {
        let r = n.rem_euclid(self.p as i64) as u64;
        let mut coeffs: Coeffs = std::iter::repeat_n(0, self.k).collect();
        coeffs[0] = r;
        FieldElem {
            desc: Arc::clone(self),
            coeffs,
        }
    }

    /// Element from ascending polynomial-basis coefficients.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[u64]) -> FieldElem {
        assert!(coeffs.len() <= self.k, "too many coefficients");
        let mut c: Coeffs = coeffs.iter().map(|&x| x % self.p).collect();
        c.resize(self.k, 0);
        FieldElem {
            desc: Arc::clone(self),
            coeffs: c,
        }
    }

    /// Element with enumeration index n (coefficients = base-p digits of n,
    /// constant coefficient first). Inverse of [`FieldElem::index`].
    pub fn element_at(self: &Arc<Self>, mut n: u128) -> FieldElem {
        let mut coeffs: Coeffs = SmallVec::new();
        for _ in 0..self.k {
            coeffs.push((n % self.p as u128) as u64);
            n /= self.p as u128;
        }
        assert!(n == 0, "index out of range");
        FieldElem {
            desc: Arc::clone(self),
            coeffs,
        }
    }

    /// Iterate all field elements in the fixed enumeration order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElem> {
        let desc = Arc::clone(self);
        (0..desc.order()).map(move |n| desc.element_at(n))
    }

    /// The deterministic primitive third root of unity: the smallest element
    /// omega in enumeration order with omega != 1 and omega^3 = 1.
    pub fn primitive_cube_root(self: &Arc<Self>) -> Result<FieldElem, FieldError> {
        let q = self.order();
        if !(q - 1).is_multiple_of(3) {
            return Err(FieldError::NoCubeRoot { order: q });
        }
        let e = ((q - 1) / 3) as u64 as u128;
        let one = self.one();
        for n in 2..q {
            let c = self.element_at(n);
            let w = c.pow_u128(e);
            if w != one {
                let w2 = &w * &w;
                return Ok(if w.index() <= w2.index() { w } else { w2 });
            }
        }
        Err(FieldError::NoCubeRoot { order: q })
    }
}

/// Convenience wrapper mirroring the library-level constructor name.
pub fn field_make(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Arc<FieldDesc>, FieldError> {
    FieldDesc::new(p, k, modulus)
}

// ---------------------------------------------------------------------------
// FieldElem
// ---------------------------------------------------------------------------

/// Element of `F_{p^k}` in the polynomial basis of its descriptor's modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    desc: Arc<FieldDesc>,
    coeffs: Coeffs,
}

impl FieldElem {
    pub fn desc(&self) -> &Arc<FieldDesc> {
        &self.desc
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime subfield.
    pub fn is_prime_field(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Enumeration index: coefficients read as base-p digits.
    pub fn index(&self) -> u128 {
        let p = self.desc.p as u128;
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * p + c as u128)
    }

    fn same_field(&self, other: &FieldElem) -> bool {
        Arc::ptr_eq(&self.desc, &other.desc) || self.desc == other.desc
    }

    fn assert_same_field(&self, other: &FieldElem) {
        assert!(
            self.same_field(other),
            "mixed field descriptors: F_{}^{} vs F_{}^{}",
            self.desc.p,
            self.desc.k,
            other.desc.p,
            other.desc.k
        );
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.assert_same_field(other);
        let p = self.desc.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FieldElem {
            desc: Arc::clone(&self.desc),
            coeffs,
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.assert_same_field(other);
        let p = self.desc.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        FieldElem {
            desc: Arc::clone(&self.desc),
            coeffs,
        }
    }

    pub fn neg(&self) -> FieldElem {
        let p = self.desc.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElem {
            desc: Arc::clone(&self.desc),
            coeffs,
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        self.assert_same_field(other);
        let p = self.desc.p;
        let k = self.desc.k;
        if k == 1 {
            let mut coeffs: Coeffs = SmallVec::new();
            coeffs.push(mul_mod(self.coeffs[0], other.coeffs[0], p));
            return FieldElem {
                desc: Arc::clone(&self.desc),
                coeffs,
            };
        }
        let prod = poly_mul(&self.coeffs, &other.coeffs, p);
        let red = poly_rem(&prod, &self.desc.modulus, p);
        let mut coeffs: Coeffs = red.into_iter().collect();
        coeffs.resize(k, 0);
        FieldElem {
            desc: Arc::clone(&self.desc),
            coeffs,
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn try_inv(&self) -> Result<FieldElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        // a^(q-2) = a^{-1} in F_q
        Ok(self.pow_u128(self.desc.order() - 2))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> FieldElem {
        self.try_inv().expect("inversion of zero")
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.pow_u128(e as u128)
    }

    fn pow_u128(&self, mut e: u128) -> FieldElem {
        let mut acc = self.desc.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius a -> a^p.
    pub fn frobenius(&self) -> FieldElem {
        self.pow(self.desc.p)
    }

    /// The unique square root in characteristic 2, computed as the inverse
    /// of the Frobenius: a^(2^(k-1)).
    pub fn sqrt(&self) -> Result<FieldElem, FieldError> {
        if self.desc.p != 2 {
            return Err(FieldError::SqrtNeedsCharTwo);
        }
        let e = 1u128 << (self.desc.k - 1);
        Ok(self.pow_u128(e))
    }

    // -- text form ----------------------------------------------------------

    /// Canonical text `a0 + a1*g + a2*g^2 + ...` with zero terms skipped.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, _) => format!("{c}"),
                (1, 1) => "g".to_string(),
                (1, _) => format!("{c}*g"),
                (_, 1) => format!("g^{i}"),
                (_, _) => format!("{c}*g^{i}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }

    /// Parse the canonical text form (also accepts `-` between terms).
    pub fn parse(desc: &Arc<FieldDesc>, text: &str) -> Result<FieldElem, FieldError> {
        let mut acc = desc.zero();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(FieldError::Parse(text.to_string()));
        }
        let mut sign_neg = false;
        if let Some(r) = rest.strip_prefix('-') {
            sign_neg = true;
            rest = r.trim_start();
        }
        loop {
            let (term, tail) = match rest.find(['+', '-']) {
                Some(pos) => (&rest[..pos], Some((rest.as_bytes()[pos] == b'-', &rest[pos + 1..]))),
                None => (rest, None),
            };
            let t = parse_elem_term(desc, term.trim()).ok_or_else(|| FieldError::Parse(text.to_string()))?;
            acc = if sign_neg { acc.sub(&t) } else { acc.add(&t) };
            match tail {
                Some((neg, t)) => {
                    sign_neg = neg;
                    rest = t.trim_start();
                }
                None => break,
            }
        }
        Ok(acc)
    }
}

fn parse_elem_term(desc: &Arc<FieldDesc>, term: &str) -> Option<FieldElem> {
    // term := INT | INT '*' GPOW | GPOW ; GPOW := 'g' | 'g^' INT
    let mut coef: u64 = 1;
    let mut saw_coef = false;
    let mut degree: usize = 0;
    for factor in term.split('*') {
        let f = factor.trim();
        if f.is_empty() {
            return None;
        }
        if let Some(g_part) = f.strip_prefix('g') {
            if degree != 0 {
                return None;
            }
            if g_part.is_empty() {
                degree = 1;
            } else {
                degree = g_part.strip_prefix('^')?.trim().parse().ok()?;
            }
            if degree == 0 || (degree >= desc.k && desc.k > 1) || (desc.k == 1) {
                return None;
            }
        } else {
            if saw_coef {
                return None;
            }
            coef = f.parse::<u64>().ok()? % desc.p;
            saw_coef = true;
        }
    }
    if degree == 0 && !saw_coef {
        return None;
    }
    let mut coeffs = vec![0u64; desc.k];
    coeffs[degree] = coef;
    Some(desc.from_coeffs(&coeffs))
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in F_{}^{}", self.to_text(), self.desc.p, self.desc.k)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

macro_rules! elem_binop {
    ($trait:ident, $method:ident, $impl_method:ident) => {
        impl std::ops::$trait<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$impl_method(rhs)
            }
        }
    };
}

elem_binop!(Add, add, add);
elem_binop!(Sub, sub, sub);
elem_binop!(Mul, mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, k: usize) -> Arc<FieldDesc> {
        FieldDesc::new(p, k, None).unwrap()
    }

    #[test]
    fn make_validates_inputs() {
        assert!(matches!(FieldDesc::new(4, 1, None), Err(FieldError::NonPrime(4))));
        assert!(matches!(FieldDesc::new(2, 0, None), Err(FieldError::BadDegree(0))));
        assert!(matches!(
            FieldDesc::new(2, 12, None),
            Err(FieldError::NoDefaultModulus { .. })
        ));
        // x^2 + 1 = (x+1)^2 over F_2
        assert!(matches!(
            FieldDesc::new(2, 2, Some(vec![1, 0, 1])),
            Err(FieldError::ReducibleModulus(2))
        ));
        // explicit GF(8) modulus x^3 + x + 1
        let f8 = FieldDesc::new(2, 3, Some(vec![1, 1, 0, 1])).unwrap();
        assert_eq!(f8.order(), 8);
        assert_eq!(gf(2, 3).as_ref(), f8.as_ref());
    }

    #[test]
    fn gf4_hand_tables() {
        // GF(4) = F_2[g]/(g^2+g+1): elements 0, 1, w = g, w+1 = g+1
        let f4 = gf(2, 2);
        let w = f4.generator();
        let w1 = w.add(&f4.one());
        assert_eq!(&w * &w, w1); // w^2 = w + 1
        assert_eq!(&w * &w1, f4.one()); // w * w^2 = w^3 = 1
        assert_eq!(&w + &w, f4.zero());
        assert_eq!(&w1 + &w, f4.one());
        // full multiplication table against index arithmetic in GF(4)
        let elems: Vec<_> = f4.elements().collect();
        for a in &elems {
            for b in &elems {
                let ab = a.mul(b);
                let ba = b.mul(a);
                assert_eq!(ab, ba);
                if !a.is_zero() {
                    assert_eq!(&a.inv() * &ab, *b);
                }
            }
        }
    }

    #[test]
    fn inv_in_prime_field() {
        let f2 = gf(2, 1);
        assert_eq!(f2.one().inv(), f2.one());
        let f7 = gf(7, 1);
        for n in 1..7 {
            let a = f7.from_int(n);
            assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    #[should_panic(expected = "inversion of zero")]
    fn inv_of_zero_panics() {
        let f2 = gf(2, 1);
        let _ = f2.zero().inv();
    }

    #[test]
    #[should_panic(expected = "mixed field descriptors")]
    fn cross_field_is_hard_error() {
        let a = gf(2, 1).one();
        let b = gf(2, 2).one();
        let _ = &a + &b;
    }

    #[test]
    fn gf8_generator_cube() {
        // x * x^2 = x^3 = x + 1 mod x^3 + x + 1
        let f8 = gf(2, 3);
        let x = f8.generator();
        let expect = f8.from_coeffs(&[1, 1, 0]);
        assert_eq!(&x * &(&x * &x), expect);
    }

    #[test]
    fn sqrt_is_inverse_frobenius() {
        for k in 1..=4 {
            let f = gf(2, k);
            for a in f.elements() {
                let s = a.sqrt().unwrap();
                assert_eq!(&s * &s, a, "sqrt(a)^2 = a in GF(2^{k})");
            }
        }
        // larger fields: a pseudo-random sample
        let f256 = gf(2, 8);
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..64 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = f256.element_at((state >> 16) as u128 % f256.order());
            let s = a.sqrt().unwrap();
            assert_eq!(&s * &s, a);
        }
        assert!(gf(3, 1).one().sqrt().is_err());
    }

    #[test]
    fn sqrt_examples() {
        let f2 = gf(2, 1);
        assert_eq!(f2.zero().sqrt().unwrap(), f2.zero());
        let f4 = gf(2, 2);
        let w = f4.generator();
        // sqrt(w) = w + 1 since (w+1)^2 = w^2 + 1 = w
        assert_eq!(w.sqrt().unwrap(), w.add(&f4.one()));
        let f8 = gf(2, 3);
        for a in f8.elements() {
            assert_eq!(a.sqrt().unwrap(), a.pow(4), "sqrt = a^4 in GF(8)");
        }
    }

    #[test]
    fn frobenius_is_field_homomorphism() {
        for (p, k) in [(2, 3), (2, 4), (3, 2)] {
            let f = gf(p, k);
            let elems: Vec<_> = f.elements().collect();
            for a in &elems {
                for b in &elems {
                    assert_eq!(a.add(b).frobenius(), a.frobenius().add(&b.frobenius()));
                    assert_eq!(a.mul(b).frobenius(), a.frobenius().mul(&b.frobenius()));
                }
            }
        }
    }

    #[test]
    fn cube_roots() {
        let f4 = gf(2, 2);
        assert_eq!(f4.primitive_cube_root().unwrap(), f4.generator());
        assert!(gf(2, 1).primitive_cube_root().is_err());
        // GF(16): the answer is g^5 for the generator g of GF(16)*
        let f16 = gf(2, 4);
        let w = f16.primitive_cube_root().unwrap();
        assert!(!w.is_one());
        assert!(w.pow(3).is_one());
        assert_eq!(w, f16.generator().pow(5));
    }

    #[test]
    fn irreducibility_agrees_with_trial_factorization() {
        // exhaustive monic divisor search as the independent oracle
        fn trial_irreducible(m: &[u64], p: u64) -> bool {
            let k = m.len() - 1;
            if k == 1 {
                return true;
            }
            // candidate divisors: monic of degree 1..=k/2, coefficients by counter
            for d in 1..=k / 2 {
                let count = (p as u128).pow(d as u32);
                for n in 0..count {
                    let mut div = vec![0u64; d + 1];
                    let mut idx = n;
                    for c in div.iter_mut().take(d) {
                        *c = (idx % p as u128) as u64;
                        idx /= p as u128;
                    }
                    div[d] = 1;
                    if poly_rem(m, &div, p).is_empty() {
                        return false;
                    }
                }
            }
            true
        }
        for p in [2u64, 3] {
            for k in 2..=4usize {
                let count = (p as u128).pow(k as u32);
                for n in 0..count {
                    let mut m = vec![0u64; k + 1];
                    let mut idx = n;
                    for c in m.iter_mut().take(k) {
                        *c = (idx % p as u128) as u64;
                        idx /= p as u128;
                    }
                    m[k] = 1;
                    assert_eq!(
                        is_irreducible(&m, p),
                        trial_irreducible(&m, p),
                        "p={p} modulus={m:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn element_text_round_trip() {
        let f4 = gf(2, 2);
        for a in f4.elements() {
            let text = a.to_text();
            assert_eq!(FieldElem::parse(&f4, &text).unwrap(), a, "round trip {text}");
        }
        let f9 = gf(3, 2);
        for a in f9.elements() {
            assert_eq!(FieldElem::parse(&f9, &a.to_text()).unwrap(), a);
        }
        let w1 = FieldElem::parse(&f4, "1 + g").unwrap();
        assert_eq!(w1, f4.generator().add(&f4.one()));
        assert!(FieldElem::parse(&f4, "q").is_err());
        assert!(FieldElem::parse(&f4, "g^5").is_err());
    }
}
