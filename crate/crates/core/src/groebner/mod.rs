//! Buchberger-based Groebner engine: reduced bases, normal forms, ideal
//! membership and equality, elimination ideals and subalgebra membership.
//!
//! Every returned basis is the reduced Groebner basis of its ideal (monic,
//! interreduced, sorted by leading monomial), which is unique for a given
//! ideal and order; golden-file tests and the disk cache rely on that. After
//! construction the full Buchberger criterion is re-checked without pair
//! shortcuts and the outcome stored as a certificate flag.

mod cache;

pub use cache::{buchberger_cached, GbCache};

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::field::{FieldDesc, FieldElem};
use crate::poly::{Monomial, MonomialOrder, MultiPoly, VarRoster};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("degree cap exceeded: intermediate degree {reached} > cap {cap}")]
    DegreeCap { reached: u32, cap: u32 },
    #[error("timed out (deadline exceeded by {over_ms} ms)")]
    Timeout { over_ms: u128 },
}

/// Per-call resource limits. Exceeding either is a reported failure, never a
/// silent partial answer.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub deadline: Option<Instant>,
    pub degree_cap: Option<u32>,
}

impl Limits {
    pub fn none() -> Limits {
        Limits::default()
    }

    pub fn new(timeout: Option<Duration>, degree_cap: Option<u32>) -> Limits {
        Limits {
            deadline: timeout.map(|d| Instant::now() + d),
            degree_cap,
        }
    }

    fn check_time(&self) -> Result<(), EngineError> {
        if let Some(deadline) = self.deadline {
            let now = Instant::now();
            if now > deadline {
                return Err(EngineError::Timeout {
                    over_ms: (now - deadline).as_millis(),
                });
            }
        }
        Ok(())
    }

    fn check_degree(&self, d: u32) -> Result<(), EngineError> {
        if let Some(cap) = self.degree_cap {
            if d > cap {
                return Err(EngineError::DegreeCap { reached: d, cap });
            }
        }
        Ok(())
    }
}

/// Reduced Groebner basis together with its provenance and certificate flag.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    roster: Arc<VarRoster>,
    desc: Arc<FieldDesc>,
    order: MonomialOrder,
    gens: Vec<MultiPoly>,
    source: Vec<MultiPoly>,
    certified: bool,
}

impl GroebnerBasis {
    pub fn roster(&self) -> &Arc<VarRoster> {
        &self.roster
    }

    pub fn desc(&self) -> &Arc<FieldDesc> {
        &self.desc
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn source(&self) -> &[MultiPoly] {
        &self.source
    }

    /// True when all S-polynomials of the final basis were re-checked to
    /// reduce to zero.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Canonical remainder of `f` modulo the basis. Zero exactly for ideal
    /// members; idempotent and linear.
    pub fn normal_form(&self, f: &MultiPoly) -> MultiPoly {
        reduce_full(f, &self.gens, &self.order, &Limits::none())
            .expect("unlimited reduction cannot hit a resource limit")
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub(crate) fn from_parts(
        roster: Arc<VarRoster>,
        desc: Arc<FieldDesc>,
        order: MonomialOrder,
        gens: Vec<MultiPoly>,
        source: Vec<MultiPoly>,
        certified: bool,
    ) -> GroebnerBasis {
        GroebnerBasis {
            roster,
            desc,
            order,
            gens,
            source,
            certified,
        }
    }

    /// Standard monomials (not divisible by any leading monomial) of total
    /// degree at most `d`, in ascending enumeration order.
    pub fn standard_monomials(&self, d: u32) -> Vec<Monomial> {
        let lms: Vec<Monomial> = self
            .gens
            .iter()
            .map(|p| p.leading_term(&self.order).unwrap().0.clone())
            .collect();
        monomials_up_to(self.roster.arity(), d)
            .into_iter()
            .filter(|m| !lms.iter().any(|lm| lm.divides(m)))
            .collect()
    }
}

/// All monomials of total degree <= d in the fixed enumeration order
/// (ascending total degree, then structural exponent order).
pub fn monomials_up_to(arity: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; arity];
    fn rec(exps: &mut Vec<u16>, i: usize, left: u32, out: &mut Vec<Monomial>) {
        if i == exps.len() {
            out.push(Monomial::from_exps(exps));
            return;
        }
        for e in 0..=left {
            exps[i] = e as u16;
            rec(exps, i + 1, left - e, out);
        }
        exps[i] = 0;
    }
    rec(&mut exps, 0, d, &mut out);
    out.sort_by(|a, b| {
        a.total_degree()
            .cmp(&b.total_degree())
            .then_with(|| b.cmp(a))
    });
    out
}

/// Structural comparison used for deterministic tie-breaking.
fn struct_cmp(a: &MultiPoly, b: &MultiPoly) -> Ordering {
    let mut ia = a.terms();
    let mut ib = b.terms();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ma, ca)), Some((mb, cb))) => {
                match ma.cmp(mb).then_with(|| ca.coeffs().cmp(cb.coeffs())) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
        }
    }
}

/// Full reduction of `f` by `gens`: every term of the remainder is reducible
/// by no generator. Reducer tie-break: smallest leading monomial in the
/// ambient order, then lowest index.
fn reduce_full(
    f: &MultiPoly,
    gens: &[MultiPoly],
    order: &MonomialOrder,
    limits: &Limits,
) -> Result<MultiPoly, EngineError> {
    let leads: Vec<(usize, Monomial, FieldElem)> = gens
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.leading_term(order).map(|(m, c)| (i, m.clone(), c.clone())))
        .collect();
    let mut p = f.clone();
    let mut remainder = MultiPoly::zero(f.roster(), f.desc());
    let mut steps: u32 = 0;
    while let Some((lm, lc)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        steps += 1;
        if steps.is_multiple_of(256) {
            limits.check_time()?;
        }
        let mut best: Option<&(usize, Monomial, FieldElem)> = None;
        for cand in &leads {
            if !cand.1.divides(&lm) {
                continue;
            }
            best = match best {
                None => Some(cand),
                Some(cur) => match order.cmp(&cand.1, &cur.1) {
                    Ordering::Less => Some(cand),
                    Ordering::Greater => Some(cur),
                    Ordering::Equal => {
                        if cand.0 < cur.0 {
                            Some(cand)
                        } else {
                            Some(cur)
                        }
                    }
                },
            };
        }
        match best {
            Some((i, glm, glc)) => {
                let quot_m = lm.checked_div(glm).unwrap();
                let quot_c = lc.mul(&glc.inv());
                p = p.sub(&gens[*i].mul_term(&quot_m, &quot_c));
            }
            None => {
                // irreducible leading term: move it to the remainder
                remainder.add_term(lm.clone(), lc.clone());
                p.add_term(lm, lc.neg());
            }
        }
    }
    Ok(remainder)
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    lcm_degree: u32,
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Reduced Groebner basis of the ideal generated by `gens`.
pub fn buchberger(
    gens: &[MultiPoly],
    order: &MonomialOrder,
    limits: &Limits,
) -> Result<GroebnerBasis, EngineError> {
    let (roster, desc) = match gens.first() {
        Some(g) => (Arc::clone(g.roster()), Arc::clone(g.desc())),
        None => panic!("buchberger needs at least one polynomial to fix the ring"),
    };
    for g in gens {
        assert!(g.roster() == &roster && g.desc() == &desc, "gens in one ring");
    }
    let mut basis: Vec<MultiPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic(order))
        .collect();
    basis.sort_by(struct_cmp);
    basis.dedup();

    let mut queue: BTreeSet<PairKey> = BTreeSet::new();
    let mut treated: BTreeSet<(usize, usize)> = BTreeSet::new();
    let lead = |p: &MultiPoly| p.leading_term(order).map(|(m, _)| m.clone()).unwrap();
    let mut leads: Vec<Monomial> = basis.iter().map(&lead).collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let lcm = leads[i].lcm(&leads[j]);
            queue.insert(PairKey {
                lcm_degree: lcm.total_degree(),
                lcm,
                i,
                j,
            });
        }
    }

    while let Some(pair) = queue.pop_first() {
        limits.check_time()?;
        let (i, j) = (pair.i, pair.j);
        treated.insert((i, j));
        if leads[i].is_coprime_with(&leads[j]) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides(&pair.lcm)
                && treated.contains(&(i.min(k), i.max(k)))
                && treated.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let red = reduce_full(&s, &basis, order, limits)?;
        if red.is_zero() {
            continue;
        }
        if let Some(d) = red.total_degree() {
            limits.check_degree(d)?;
        }
        let red = red.monic(order);
        let new_idx = basis.len();
        leads.push(lead(&red));
        basis.push(red);
        for k in 0..new_idx {
            let lcm = leads[k].lcm(&leads[new_idx]);
            queue.insert(PairKey {
                lcm_degree: lcm.total_degree(),
                lcm,
                i: k,
                j: new_idx,
            });
        }
    }

    let reduced = interreduce(basis, order, limits)?;
    let certified = certify(&reduced, order, limits)?;
    debug_assert!(certified, "reduced basis failed its own S-pair re-check");
    Ok(GroebnerBasis {
        roster,
        desc,
        order: order.clone(),
        gens: reduced,
        source: gens.to_vec(),
        certified,
    })
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly, order: &MonomialOrder) -> MultiPoly {
    let (fm, fc) = f.leading_term(order).unwrap();
    let (gm, gc) = g.leading_term(order).unwrap();
    let lcm = fm.lcm(gm);
    let a = f.mul_term(&lcm.checked_div(fm).unwrap(), &fc.inv());
    let b = g.mul_term(&lcm.checked_div(gm).unwrap(), &gc.inv());
    a.sub(&b)
}

/// Minimalize then autoreduce; output sorted by leading monomial ascending.
fn interreduce(
    mut basis: Vec<MultiPoly>,
    order: &MonomialOrder,
    limits: &Limits,
) -> Result<Vec<MultiPoly>, EngineError> {
    // minimal: no leading monomial divides another's
    let mut keep: Vec<MultiPoly> = Vec::new();
    basis.sort_by(|a, b| {
        order
            .cmp(a.leading_term(order).unwrap().0, b.leading_term(order).unwrap().0)
            .then_with(|| struct_cmp(a, b))
    });
    for (idx, g) in basis.iter().enumerate() {
        let glm = g.leading_term(order).unwrap().0;
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            if k == idx {
                return false;
            }
            let hlm = h.leading_term(order).unwrap().0;
            hlm.divides(glm) && (hlm != glm || k < idx)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // autoreduce to the fixed point
    loop {
        let mut changed = false;
        for i in 0..keep.len() {
            let others: Vec<MultiPoly> = keep
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, p)| p.clone())
                .collect();
            let r = reduce_full(&keep[i], &others, order, limits)?.monic(order);
            if r != keep[i] {
                changed = true;
                keep[i] = r;
            }
        }
        keep.retain(|p| !p.is_zero());
        if !changed {
            break;
        }
    }
    keep.sort_by(|a, b| {
        order
            .cmp(a.leading_term(order).unwrap().0, b.leading_term(order).unwrap().0)
            .then_with(|| struct_cmp(a, b))
    });
    Ok(keep)
}

/// Full Buchberger criterion check, no pair shortcuts.
fn certify(basis: &[MultiPoly], order: &MonomialOrder, limits: &Limits) -> Result<bool, EngineError> {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j], order);
            if !reduce_full(&s, basis, order, limits)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Generators of the elimination ideal obtained by dropping `drop_vars`,
/// via a block-order basis intersected with the kept subring.
pub fn eliminate(
    gens: &[MultiPoly],
    drop_vars: &[usize],
    limits: &Limits,
) -> Result<Vec<MultiPoly>, EngineError> {
    let order = MonomialOrder::block(drop_vars.to_vec());
    let gb = buchberger(gens, &order, limits)?;
    Ok(gb
        .gens()
        .iter()
        .filter(|p| {
            p.terms()
                .all(|(m, _)| drop_vars.iter().all(|&v| m.exp(v) == 0))
        })
        .cloned()
        .collect())
}

/// Both-ways reduction certificate for ideal equality.
#[derive(Debug, Clone)]
pub struct IdealEqualityCert {
    pub equal: bool,
    /// (generator of a, its normal form modulo GB(b))
    pub a_mod_b: Vec<(MultiPoly, MultiPoly)>,
    /// (generator of b, its normal form modulo GB(a))
    pub b_mod_a: Vec<(MultiPoly, MultiPoly)>,
}

pub fn ideal_equal(
    a: &[MultiPoly],
    b: &[MultiPoly],
    order: &MonomialOrder,
    limits: &Limits,
) -> Result<IdealEqualityCert, EngineError> {
    // an empty list generates the zero ideal; reduction modulo it is the
    // identity, so the certificate below stays meaningful
    let basis_of = |gens: &[MultiPoly]| -> Result<Option<GroebnerBasis>, EngineError> {
        if gens.iter().all(|g| g.is_zero()) {
            Ok(None)
        } else {
            Ok(Some(buchberger(gens, order, limits)?))
        }
    };
    let gb_a = basis_of(a)?;
    let gb_b = basis_of(b)?;
    let nf = |gb: &Option<GroebnerBasis>, f: &MultiPoly| match gb {
        Some(gb) => gb.normal_form(f),
        None => f.clone(),
    };
    let a_mod_b: Vec<_> = a.iter().map(|g| (g.clone(), nf(&gb_b, g))).collect();
    let b_mod_a: Vec<_> = b.iter().map(|g| (g.clone(), nf(&gb_a, g))).collect();
    let equal = a_mod_b.iter().all(|(_, nf)| nf.is_zero())
        && b_mod_a.iter().all(|(_, nf)| nf.is_zero());
    Ok(IdealEqualityCert {
        equal,
        a_mod_b,
        b_mod_a,
    })
}

/// Subalgebra membership tester: one tag variable per algebra generator,
/// the ideal (tag - gen) + modulo, block order eliminating the original
/// variables. `f` is a member iff its normal form lands in the tag subring.
pub struct SubalgebraTester {
    base_roster: Arc<VarRoster>,
    ext_roster: Arc<VarRoster>,
    gb: GroebnerBasis,
    n_base: usize,
}

impl SubalgebraTester {
    pub fn new(
        algebra_gens: &[MultiPoly],
        modulo: &[MultiPoly],
        limits: &Limits,
    ) -> Result<SubalgebraTester, EngineError> {
        let first = algebra_gens.first().expect("at least one algebra generator");
        let roster = Arc::clone(first.roster());
        let desc = Arc::clone(first.desc());
        let n = roster.arity();
        let tags = fresh_tag_names(&roster, algebra_gens.len());
        let mut names: Vec<String> = roster.names().to_vec();
        names.extend(tags);
        let ext = VarRoster::new(names);
        let base_positions: Vec<usize> = (0..n).collect();
        let mut ideal: Vec<MultiPoly> = Vec::new();
        for (t, g) in algebra_gens.iter().enumerate() {
            let tag = MultiPoly::var(&ext, &desc, n + t);
            ideal.push(tag.sub(&g.embed(&ext, &base_positions)));
        }
        for m in modulo {
            ideal.push(m.embed(&ext, &base_positions));
        }
        let order = MonomialOrder::block(base_positions);
        let gb = buchberger(&ideal, &order, limits)?;
        Ok(SubalgebraTester {
            base_roster: roster,
            ext_roster: ext,
            gb,
            n_base: n,
        })
    }

    /// Membership of `f` (in the base ring) in the tagged subalgebra modulo
    /// the ideal.
    pub fn contains(&self, f: &MultiPoly) -> bool {
        assert!(f.roster() == &self.base_roster, "f lives in the base ring");
        let positions: Vec<usize> = (0..self.n_base).collect();
        let nf = self.gb.normal_form(&f.embed(&self.ext_roster, &positions));
        let in_tags = nf
            .terms()
            .all(|(m, _)| (0..self.n_base).all(|i| m.exp(i) == 0));
        in_tags
    }
}

pub fn subalgebra_contains(
    f: &MultiPoly,
    algebra_gens: &[MultiPoly],
    modulo: &[MultiPoly],
    limits: &Limits,
) -> Result<bool, EngineError> {
    Ok(SubalgebraTester::new(algebra_gens, modulo, limits)?.contains(f))
}

fn fresh_tag_names(roster: &VarRoster, count: usize) -> Vec<String> {
    for prefix in ["t", "tag", "aux", "zz_tag"] {
        let candidate: Vec<String> = (0..count).map(|i| format!("{prefix}{i}")).collect();
        if candidate.iter().all(|n| roster.index_of(n).is_none()) {
            return candidate;
        }
    }
    panic!("could not find fresh tag names");
}

/// A polynomial ring modulo an ideal, with an optional cached basis.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    roster: Arc<VarRoster>,
    desc: Arc<FieldDesc>,
    gens: Vec<MultiPoly>,
    cached: Option<GroebnerBasis>,
}

impl QuotientPresentation {
    pub fn new(roster: &Arc<VarRoster>, desc: &Arc<FieldDesc>, gens: Vec<MultiPoly>) -> QuotientPresentation {
        for g in &gens {
            assert!(g.roster() == roster && g.desc() == desc, "gens in the presented ring");
        }
        QuotientPresentation {
            roster: Arc::clone(roster),
            desc: Arc::clone(desc),
            gens,
            cached: None,
        }
    }

    /// Attach an externally produced basis after validating that it
    /// generates the same ideal (both-ways reduction certificate).
    pub fn with_cached_basis(
        roster: &Arc<VarRoster>,
        desc: &Arc<FieldDesc>,
        gens: Vec<MultiPoly>,
        gb: GroebnerBasis,
        limits: &Limits,
    ) -> Result<QuotientPresentation, EngineError> {
        let cert = ideal_equal(&gens, gb.gens(), gb.order(), limits)?;
        assert!(cert.equal, "cached basis must generate the same ideal");
        let mut qp = QuotientPresentation::new(roster, desc, gens);
        qp.cached = Some(gb);
        Ok(qp)
    }

    pub fn roster(&self) -> &Arc<VarRoster> {
        &self.roster
    }

    pub fn desc(&self) -> &Arc<FieldDesc> {
        &self.desc
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    /// The ideal's basis under `order`, computed on first use.
    pub fn groebner(&mut self, order: &MonomialOrder, limits: &Limits) -> Result<&GroebnerBasis, EngineError> {
        let stale = match &self.cached {
            Some(gb) => gb.order() != order,
            None => true,
        };
        if stale {
            if self.gens.is_empty() {
                self.cached = Some(GroebnerBasis {
                    roster: Arc::clone(&self.roster),
                    desc: Arc::clone(&self.desc),
                    order: order.clone(),
                    gens: Vec::new(),
                    source: Vec::new(),
                    certified: true,
                });
            } else {
                self.cached = Some(buchberger(&self.gens, order, limits)?);
            }
        }
        Ok(self.cached.as_ref().unwrap())
    }
}
