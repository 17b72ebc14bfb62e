//! Sparse multivariate polynomial arithmetic, monomial orders and ring maps.
//!
//! A [`MultiPoly`] stores its nonzero terms in a `BTreeMap` keyed by a fixed
//! structural order on exponent vectors, so two polynomials are equal exactly
//! when their term maps coincide. Monomial orders for Groebner computations
//! are passed to the operations that need them instead of being baked into
//! the representation.

mod text;

pub use text::PolyParseError;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::field::{FieldDesc, FieldElem};

/// Ordered list of variable names; the index of a name is its position.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct VarRoster {
    names: Vec<String>,
}

impl VarRoster {
    /// Names must be distinct identifiers; `g` is reserved for the field
    /// generator in the textual syntax.
    pub fn new<S: Into<String>>(names: Vec<S>) -> Arc<VarRoster> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(!n.is_empty(), "empty variable name");
            assert!(n != "g", "`g` is reserved for the field generator");
            assert!(
                n.chars().next().unwrap().is_ascii_alphabetic()
                    && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
                "invalid variable name `{n}`"
            );
            assert!(
                !names[..i].contains(n),
                "duplicate variable name `{n}`"
            );
        }
        Arc::new(VarRoster { names })
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Exponent vector; length equals the roster arity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; 12]>,
}

impl Monomial {
    pub fn one(arity: usize) -> Monomial {
        Monomial {
            exps: std::iter::repeat_n(0, arity).collect(),
        }
    }

    pub fn from_exps(exps: &[u16]) -> Monomial {
        Monomial {
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn var(arity: usize, i: usize, e: u16) -> Monomial {
        let mut m = Monomial::one(arity);
        m.exps[i] = e;
        m
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity(), other.arity());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    /// self / other, when other divides self.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (&a, &b) in self.exps.iter().zip(&other.exps) {
            if a < b {
                return None;
            }
            exps.push(a - b);
        }
        Some(Monomial { exps })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    pub fn is_coprime_with(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", self.exps.as_slice())
    }
}

/// Total, multiplicative well-orderings on monomials of a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Product order: grevlex on the `first` block, ties broken by grevlex
    /// on the remaining variables. Any monomial touching the first block is
    /// larger than any monomial outside it, which is the elimination
    /// property used by [`crate::groebner::eliminate`].
    Block { first: Vec<usize> },
}

impl MonomialOrder {
    /// Block order with the given (deduplicated, sorted) first block.
    pub fn block(mut first: Vec<usize>) -> MonomialOrder {
        first.sort_unstable();
        first.dedup();
        MonomialOrder::Block { first }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.arity(), b.arity());
        match self {
            MonomialOrder::Lex => {
                for (&x, &y) in a.exps.iter().zip(&b.exps) {
                    match x.cmp(&y) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::GrevLex => grevlex_on(a, b, &mut (0..a.arity())),
            MonomialOrder::Block { first } => {
                let mut in_first = vec![false; a.arity()];
                for &i in first {
                    in_first[i] = true;
                }
                let head = grevlex_on(a, b, &mut first.iter().copied());
                if head != Ordering::Equal {
                    return head;
                }
                grevlex_on(a, b, &mut (0..a.arity()).filter(|&i| !in_first[i]))
            }
        }
    }

    pub fn max<'m>(&self, a: &'m Monomial, b: &'m Monomial) -> &'m Monomial {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

fn grevlex_on<I>(a: &Monomial, b: &Monomial, idxs: &mut I) -> Ordering
where
    I: Iterator<Item = usize>,
{
    let positions: SmallVec<[usize; 12]> = idxs.collect();
    let da: u32 = positions.iter().map(|&i| a.exps[i] as u32).sum();
    let db: u32 = positions.iter().map(|&i| b.exps[i] as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // equal degree: the last differing exponent decides, reversed
    for &i in positions.iter().rev() {
        match a.exps[i].cmp(&b.exps[i]) {
            Ordering::Equal => {}
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

/// Sparse multivariate polynomial over a fixed roster and field.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    roster: Arc<VarRoster>,
    desc: Arc<FieldDesc>,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl MultiPoly {
    pub fn zero(roster: &Arc<VarRoster>, desc: &Arc<FieldDesc>) -> MultiPoly {
        MultiPoly {
            roster: Arc::clone(roster),
            desc: Arc::clone(desc),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(roster: &Arc<VarRoster>, c: FieldElem) -> MultiPoly {
        let desc = Arc::clone(c.desc());
        let mut p = MultiPoly::zero(roster, &desc);
        p.add_term(Monomial::one(roster.arity()), c);
        p
    }

    pub fn one(roster: &Arc<VarRoster>, desc: &Arc<FieldDesc>) -> MultiPoly {
        MultiPoly::constant(roster, desc.one())
    }

    pub fn var(roster: &Arc<VarRoster>, desc: &Arc<FieldDesc>, i: usize) -> MultiPoly {
        MultiPoly::var_pow(roster, desc, i, 1)
    }

    pub fn var_pow(roster: &Arc<VarRoster>, desc: &Arc<FieldDesc>, i: usize, e: u16) -> MultiPoly {
        assert!(i < roster.arity());
        let mut p = MultiPoly::zero(roster, desc);
        p.add_term(Monomial::var(roster.arity(), i, e), desc.one());
        p
    }

    pub fn from_terms(
        roster: &Arc<VarRoster>,
        desc: &Arc<FieldDesc>,
        terms: impl IntoIterator<Item = (Monomial, FieldElem)>,
    ) -> MultiPoly {
        let mut p = MultiPoly::zero(roster, desc);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn roster(&self) -> &Arc<VarRoster> {
        &self.roster
    }

    pub fn desc(&self) -> &Arc<FieldDesc> {
        &self.desc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.desc.zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Largest exponent of variable `var`; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        assert!(var < self.roster.arity());
        self.terms.keys().map(|m| m.exp(var) as u32).max()
    }

    /// Largest term under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &FieldElem)> {
        let mut best: Option<(&Monomial, &FieldElem)> = None;
        for (m, c) in &self.terms {
            best = match best {
                None => Some((m, c)),
                Some((bm, bc)) => {
                    if order.cmp(m, bm) == Ordering::Greater {
                        Some((m, c))
                    } else {
                        Some((bm, bc))
                    }
                }
            };
        }
        best
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> FieldElem {
        self.coeff(&Monomial::one(self.roster.arity()))
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial_derivative(&self, var: usize) -> MultiPoly {
        assert!(var < self.roster.arity());
        let mut out = MultiPoly::zero(&self.roster, &self.desc);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] -= 1;
            let factor = self.desc.from_int(e as i64);
            out.add_term(Monomial::from_exps(&exps), c.mul(&factor));
        }
        out
    }

    /// Degree-1 homogeneous part as a coefficient-per-variable vector.
    pub fn linear_part(&self) -> Vec<FieldElem> {
        let mut out = vec![self.desc.zero(); self.roster.arity()];
        for (m, c) in &self.terms {
            if m.total_degree() == 1 {
                let i = m.exps().iter().position(|&e| e == 1).unwrap();
                out[i] = c.clone();
            }
        }
        out
    }

    fn assert_compatible(&self, other: &MultiPoly) {
        assert!(
            Arc::ptr_eq(&self.roster, &other.roster) || self.roster == other.roster,
            "roster mismatch"
        );
        assert!(
            Arc::ptr_eq(&self.desc, &other.desc) || self.desc == other.desc,
            "field mismatch"
        );
    }

    /// Add `c * m` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: FieldElem) {
        debug_assert_eq!(m.arity(), self.roster.arity());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.roster, &self.desc);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_compatible(other);
        let mut out = MultiPoly::zero(&self.roster, &self.desc);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElem) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.roster, &self.desc);
        if c.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            out.terms.insert(ma.mul(m), ca.mul(c));
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> MultiPoly {
        self.mul_term(&Monomial::one(self.roster.arity()), c)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.roster, &self.desc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Monic rescaling under `order`; zero stays zero.
    pub fn monic(&self, order: &MonomialOrder) -> MultiPoly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                if c.is_one() {
                    self.clone()
                } else {
                    self.scale(&c.inv())
                }
            }
        }
    }

    /// Reinterpret this polynomial in a larger roster. `positions[i]` is the
    /// index in `target` of source variable `i`.
    pub fn embed(&self, target: &Arc<VarRoster>, positions: &[usize]) -> MultiPoly {
        assert_eq!(positions.len(), self.roster.arity());
        let mut out = MultiPoly::zero(target, &self.desc);
        for (m, c) in &self.terms {
            let mut exps: SmallVec<[u16; 12]> =
                std::iter::repeat_n(0, target.arity()).collect();
            for (i, &e) in m.exps().iter().enumerate() {
                exps[positions[i]] = e;
            }
            out.terms.insert(Monomial { exps }, c.clone());
        }
        out
    }

    /// Project onto a smaller roster; every term must be supported on
    /// `positions` (index in self of target variable `i`).
    pub fn project(&self, target: &Arc<VarRoster>, positions: &[usize]) -> MultiPoly {
        assert_eq!(positions.len(), target.arity());
        let mut keep = vec![false; self.roster.arity()];
        for &i in positions {
            keep[i] = true;
        }
        let mut out = MultiPoly::zero(target, &self.desc);
        for (m, c) in &self.terms {
            for (i, &e) in m.exps().iter().enumerate() {
                assert!(e == 0 || keep[i], "term involves dropped variable {}", self.roster.name(i));
            }
            let exps: SmallVec<[u16; 12]> =
                positions.iter().map(|&i| m.exps[i]).collect();
            out.terms.insert(Monomial { exps }, c.clone());
        }
        out
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                MultiPoly::$method(self, rhs)
            }
        }
    };
}

poly_binop!(Add, add);
poly_binop!(Sub, sub);
poly_binop!(Mul, mul);

/// Substitution homomorphism determined by images of the source variables.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Arc<VarRoster>,
    target: Arc<VarRoster>,
    images: Vec<MultiPoly>,
}

impl RingMap {
    pub fn new(source: &Arc<VarRoster>, images: Vec<MultiPoly>) -> RingMap {
        assert_eq!(images.len(), source.arity(), "one image per source variable");
        let target = Arc::clone(images.first().expect("nonempty roster").roster());
        for im in &images {
            assert!(im.roster() == &target, "images live in one ring");
        }
        RingMap {
            source: Arc::clone(source),
            target,
            images,
        }
    }

    pub fn identity(roster: &Arc<VarRoster>, desc: &Arc<FieldDesc>) -> RingMap {
        let images = (0..roster.arity())
            .map(|i| MultiPoly::var(roster, desc, i))
            .collect();
        RingMap::new(roster, images)
    }

    pub fn source(&self) -> &Arc<VarRoster> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VarRoster> {
        &self.target
    }

    pub fn images(&self) -> &[MultiPoly] {
        &self.images
    }

    pub fn image_of(&self, var: usize) -> &MultiPoly {
        &self.images[var]
    }

    /// Apply to a polynomial of the source ring.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        assert!(
            f.roster() == &self.source,
            "polynomial lives in the map's source ring"
        );
        let desc = Arc::clone(f.desc());
        // lazily grown power tables, powers[i][e] = images[i]^e
        let mut powers: Vec<Vec<MultiPoly>> = (0..self.images.len())
            .map(|_| Vec::new())
            .collect();
        let mut out = MultiPoly::zero(&self.target, &desc);
        for (m, c) in f.terms() {
            let mut term = MultiPoly::constant(&self.target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                if table.is_empty() {
                    table.push(MultiPoly::one(&self.target, &desc));
                }
                while table.len() <= e as usize {
                    let next = table.last().unwrap().mul(&self.images[i]);
                    table.push(next);
                }
                term = term.mul(&table[e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// self followed by `next` (images of self mapped through next).
    pub fn then(&self, next: &RingMap) -> RingMap {
        assert!(self.target == next.source, "composable maps");
        let images = self.images.iter().map(|im| next.apply(im)).collect();
        RingMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&next.target),
            images,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_make;

    fn f2() -> Arc<FieldDesc> {
        field_make(2, 1, None).unwrap()
    }

    fn parse(roster: &Arc<VarRoster>, desc: &Arc<FieldDesc>, s: &str) -> MultiPoly {
        MultiPoly::parse(roster, desc, s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = f2();
        let xy = VarRoster::new(vec!["x", "y"]);
        let x = MultiPoly::var(&xy, &f2, 0);
        let y = MultiPoly::var(&xy, &f2, 1);
        // y*y + x*y
        assert_eq!(&(&y * &y) + &(&x * &y), parse(&xy, &f2, "y^2 + x*y"));
        // (y + x)^2 = y^2 + x^2 in characteristic 2
        assert_eq!((&y + &x).pow(2), parse(&xy, &f2, "y^2 + x^2"));
        let vw = VarRoster::new(vec!["v", "w"]);
        let v = MultiPoly::var(&vw, &f2, 0);
        let w = MultiPoly::var(&vw, &f2, 1);
        // (w + v^2)^2 + v^2 (w + v^2) + v = w^2 + v^2 w + v
        let s = (&w + &v.pow(2)).pow(2)
            .add(&v.pow(2).mul(&(&w + &v.pow(2))))
            .add(&v);
        assert_eq!(s, parse(&vw, &f2, "w^2 + v^2*w + v"));
    }

    #[test]
    fn degree_profile() {
        let f2 = f2();
        let xy = VarRoster::new(vec!["x", "y"]);
        let p = parse(&xy, &f2, "y^2 + x*y");
        assert_eq!(p.degree_in(1), Some(2));
        assert_eq!(parse(&xy, &f2, "y^2").degree_in(0), Some(0));
        assert_eq!(MultiPoly::zero(&xy, &f2).degree_in(0), None);
        assert_eq!(MultiPoly::zero(&xy, &f2).total_degree(), None);
    }

    #[test]
    fn apply_map_examples() {
        let f2 = f2();
        let xy = VarRoster::new(vec!["x", "y"]);
        let x = MultiPoly::var(&xy, &f2, 0);
        let y = MultiPoly::var(&xy, &f2, 1);
        // sigma: x -> x, y -> y + x applied to y^2 gives y^2 + x^2
        let sigma = RingMap::new(&xy, vec![x.clone(), y.add(&x)]);
        assert_eq!(sigma.apply(&y.pow(2)), parse(&xy, &f2, "y^2 + x^2"));
        let id = RingMap::identity(&xy, &f2);
        let f = parse(&xy, &f2, "x^3*y + x + 1");
        assert_eq!(id.apply(&f), f);
        // homomorphism: phi(f*g) = phi(f)*phi(g) on a sample
        let gpoly = parse(&xy, &f2, "x*y + y");
        assert_eq!(
            sigma.apply(&f.mul(&gpoly)),
            sigma.apply(&f).mul(&sigma.apply(&gpoly))
        );
    }

    #[test]
    #[should_panic(expected = "roster mismatch")]
    fn mixed_rosters_are_hard_errors() {
        let f2 = f2();
        let a = MultiPoly::var(&VarRoster::new(vec!["x"]), &f2, 0);
        let b = MultiPoly::var(&VarRoster::new(vec!["y"]), &f2, 0);
        let _ = &a + &b;
    }

    #[test]
    fn grevlex_examples() {
        // in k[x,y]: x^2 > x*y > y^2 > x > y > 1
        let ord = MonomialOrder::GrevLex;
        let m = |a: u16, b: u16| Monomial::from_exps(&[a, b]);
        let chain = [m(2, 0), m(1, 1), m(0, 2), m(1, 0), m(0, 1), m(0, 0)];
        for w in chain.windows(2) {
            assert_eq!(ord.cmp(&w[0], &w[1]), Ordering::Greater);
        }
    }

    #[test]
    fn block_order_eliminates() {
        // first block {0}: any monomial with x beats any without
        let ord = MonomialOrder::block(vec![0]);
        let m = |a: u16, b: u16| Monomial::from_exps(&[a, b]);
        assert_eq!(ord.cmp(&m(1, 0), &m(0, 5)), Ordering::Greater);
        assert_eq!(ord.cmp(&m(0, 2), &m(0, 1)), Ordering::Greater);
    }

    #[test]
    fn embed_and_project_round_trip() {
        let f2 = f2();
        let small = VarRoster::new(vec!["x", "y"]);
        let big = VarRoster::new(vec!["t", "x", "y"]);
        let f = parse(&small, &f2, "x^2*y + y + 1");
        let emb = f.embed(&big, &[1, 2]);
        assert_eq!(emb, parse(&big, &f2, "x^2*y + y + 1"));
        assert_eq!(emb.project(&small, &[1, 2]), f);
    }
}
