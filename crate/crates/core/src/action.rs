//! Order-p cyclic actions on polynomial rings and their invariants: trace and
//! norm operators, reduced representatives for shift-shaped quotients, bounded
//! degree invariant spaces and the quotient-surjectivity check.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldDesc, FieldElem};
use crate::groebner::{monomials_up_to, EngineError, GroebnerBasis, Limits, QuotientPresentation};
use crate::linalg;
use crate::poly::{Monomial, MonomialOrder, MultiPoly, RingMap, VarRoster};

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("map does not have order dividing {p}: sigma^{p} is not the identity")]
    NotOrderP { p: u32 },
    #[error("ideal is not stable under the action: sigma({gen}) does not reduce to zero")]
    IdealNotStable { gen: String },
    #[error("ideal generator `{gen}` does not have the shift shape B^p - A^((p-1)e) B + P(A)")]
    NotShiftShaped { gen: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// One moved variable of a shift-shaped action: sigma(B) = B + A^e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftPair {
    pub moved: usize,
    pub companion: usize,
    pub exponent: u16,
}

/// Shape descriptor attached to an action at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionShape {
    /// Every variable is fixed or shifted by a power of a fixed companion.
    Shift { pairs: Vec<ShiftPair> },
    General,
}

/// An order-p ring endomorphism given by images of the variables.
#[derive(Debug, Clone)]
pub struct CyclicAction {
    order: u32,
    sigma: RingMap,
    shape: ActionShape,
    wild: bool,
}

impl CyclicAction {
    /// Constructs the action and verifies sigma^p = id.
    pub fn new(roster: &Arc<VarRoster>, p: u32, images: Vec<MultiPoly>) -> Result<CyclicAction, ActionError> {
        assert!(p >= 2, "group order must be at least 2");
        let sigma = RingMap::new(roster, images);
        assert!(sigma.target() == roster, "action maps the ring to itself");
        let desc = Arc::clone(sigma.images()[0].desc());
        let mut power = sigma.clone();
        for _ in 1..p {
            power = power.then(&sigma);
        }
        let id = RingMap::identity(roster, &desc);
        if power.images() != id.images() {
            return Err(ActionError::NotOrderP { p });
        }
        let shape = detect_shape(&sigma);
        let wild = desc.characteristic() == p as u64;
        Ok(CyclicAction {
            order: p,
            sigma,
            shape,
            wild,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn sigma(&self) -> &RingMap {
        &self.sigma
    }

    pub fn roster(&self) -> &Arc<VarRoster> {
        self.sigma.source()
    }

    pub fn shape(&self) -> &ActionShape {
        &self.shape
    }

    /// True when the group order equals the field characteristic.
    pub fn is_wild(&self) -> bool {
        self.wild
    }

    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        self.sigma.apply(f)
    }

    /// Tr(f) = sum of sigma^j(f) over j = 0..p-1.
    pub fn trace(&self, f: &MultiPoly) -> MultiPoly {
        let mut acc = f.clone();
        let mut iterate = f.clone();
        for _ in 1..self.order {
            iterate = self.sigma.apply(&iterate);
            acc = acc.add(&iterate);
        }
        acc
    }

    /// N(f) = product of sigma^j(f) over j = 0..p-1.
    pub fn norm(&self, f: &MultiPoly) -> MultiPoly {
        let mut acc = f.clone();
        let mut iterate = f.clone();
        for _ in 1..self.order {
            iterate = self.sigma.apply(&iterate);
            acc = acc.mul(&iterate);
        }
        acc
    }

    pub fn is_invariant(&self, f: &MultiPoly) -> bool {
        self.sigma.apply(f) == *f
    }
}

/// Recognize images of the form B + A^e (all other variables fixed).
fn detect_shape(sigma: &RingMap) -> ActionShape {
    let roster = sigma.source();
    let desc = sigma.images()[0].desc();
    let mut pairs = Vec::new();
    for v in 0..roster.arity() {
        let image = sigma.image_of(v);
        let var = MultiPoly::var(roster, desc, v);
        if *image == var {
            continue;
        }
        let shift = image.sub(&var);
        if shift.num_terms() != 1 {
            return ActionShape::General;
        }
        let (mono, coeff) = shift.terms().next().unwrap();
        if !coeff.is_one() {
            return ActionShape::General;
        }
        let support: Vec<usize> = (0..roster.arity()).filter(|&i| mono.exp(i) > 0).collect();
        if support.len() != 1 || support[0] == v {
            return ActionShape::General;
        }
        pairs.push(ShiftPair {
            moved: v,
            companion: support[0],
            exponent: mono.exp(support[0]),
        });
    }
    // companions must be fixed variables, distinct from every moved one
    let moved: BTreeSet<usize> = pairs.iter().map(|p| p.moved).collect();
    if pairs.iter().any(|p| moved.contains(&p.companion)) {
        return ActionShape::General;
    }
    ActionShape::Shift { pairs }
}

/// Library-level constructor mirroring the operation name.
pub fn make_action(roster: &Arc<VarRoster>, p: u32, images: Vec<MultiPoly>) -> Result<CyclicAction, ActionError> {
    CyclicAction::new(roster, p, images)
}

// ---------------------------------------------------------------------------
// shift-shaped quotients and reduced representatives
// ---------------------------------------------------------------------------

/// One recognized ideal generator B^p - A^((p-1)e) B + P(A).
#[derive(Debug, Clone)]
pub struct ShiftGenerator {
    pub b_var: usize,
    pub a_var: usize,
    pub exponent: u16,
    pub power: u16,
    /// B^p rewrites to this polynomial: A^((p-1)e) B - P(A).
    rewrite: MultiPoly,
}

/// Shape of an ideal generated by shift-compatible relations; supports the
/// unique representative with deg_B <= p-1 in every moved variable.
#[derive(Debug, Clone)]
pub struct ShiftQuotientShape {
    gens: Vec<ShiftGenerator>,
}

impl ShiftQuotientShape {
    pub fn detect(quotient: &QuotientPresentation) -> Result<ShiftQuotientShape, ActionError> {
        let roster = quotient.roster();
        let desc = quotient.desc();
        let mut gens = Vec::new();
        for g in quotient.gens() {
            gens.push(detect_shift_generator(g, roster, desc)?);
        }
        // pairwise distinct variables, powers agree
        let power = gens.first().map(|s| s.power);
        let b_vars: BTreeSet<usize> = gens.iter().map(|s| s.b_var).collect();
        let a_vars: BTreeSet<usize> = gens.iter().map(|s| s.a_var).collect();
        let consistent = b_vars.len() == gens.len()
            && gens.iter().all(|s| Some(s.power) == power)
            && b_vars.is_disjoint(&a_vars);
        if !consistent {
            return Err(ActionError::NotShiftShaped {
                gen: quotient
                    .gens()
                    .first()
                    .map(|g| g.to_text())
                    .unwrap_or_default(),
            });
        }
        Ok(ShiftQuotientShape { gens })
    }

    pub fn generators(&self) -> &[ShiftGenerator] {
        &self.gens
    }

    pub fn power(&self) -> u16 {
        self.gens.first().map(|s| s.power).unwrap_or(0)
    }

    /// The unique representative of `f` with deg_B <= p-1 in every moved
    /// variable, obtained by rewriting B^p -> A^((p-1)e) B - P to a fixed
    /// point, highest B-degree term first.
    pub fn reduce_representative(&self, f: &MultiPoly) -> MultiPoly {
        let mut current = f.clone();
        loop {
            let mut rewrote = false;
            for shift in &self.gens {
                let p = shift.power;
                // the violating term with the highest B-degree
                let worst = current
                    .terms()
                    .filter(|(m, _)| m.exp(shift.b_var) >= p)
                    .max_by(|(ma, _), (mb, _)| {
                        ma.exp(shift.b_var)
                            .cmp(&mb.exp(shift.b_var))
                            .then_with(|| ma.cmp(mb))
                    })
                    .map(|(m, c)| (m.clone(), c.clone()));
                if let Some((mono, coeff)) = worst {
                    let reduced_mono = {
                        let mut exps = mono.exps().to_vec();
                        exps[shift.b_var] -= p;
                        Monomial::from_exps(&exps)
                    };
                    let replacement = shift.rewrite.mul_term(&reduced_mono, &coeff);
                    current.add_term(mono, coeff.neg());
                    current = current.add(&replacement);
                    rewrote = true;
                    break;
                }
            }
            if !rewrote {
                return current;
            }
        }
    }

    /// True when every moved variable occurs with exponent <= p-1.
    pub fn is_reduced(&self, f: &MultiPoly) -> bool {
        f.terms()
            .all(|(m, _)| self.gens.iter().all(|s| m.exp(s.b_var) < s.power))
    }
}

fn detect_shift_generator(
    g: &MultiPoly,
    roster: &Arc<VarRoster>,
    desc: &Arc<FieldDesc>,
) -> Result<ShiftGenerator, ActionError> {
    let arity = roster.arity();
    'candidates: for b in 0..arity {
        let p = match g.degree_in(b) {
            Some(d) if d >= 2 => d as u16,
            _ => continue,
        };
        let mut a_term: Option<(usize, u16, FieldElem)> = None;
        let mut tail = MultiPoly::zero(roster, desc);
        let mut pure_power_ok = false;
        for (m, c) in g.terms() {
            let eb = m.exp(b);
            if eb == p {
                if m.total_degree() as u16 != p || !c.is_one() {
                    continue 'candidates;
                }
                pure_power_ok = true;
            } else if eb == 1 {
                // must be -A^((p-1)e) * B for a single companion variable
                let support: Vec<usize> =
                    (0..arity).filter(|&i| i != b && m.exp(i) > 0).collect();
                if support.len() != 1 || a_term.is_some() {
                    continue 'candidates;
                }
                let a = support[0];
                a_term = Some((a, m.exp(a), c.clone()));
            } else if eb == 0 {
                tail.add_term(m.clone(), c.clone());
            } else {
                continue 'candidates;
            }
        }
        let Some((a, m_exp, coeff)) = a_term else {
            continue 'candidates;
        };
        if !pure_power_ok || coeff != desc.from_int(-1) {
            continue 'candidates;
        }
        if m_exp % (p - 1) != 0 {
            continue 'candidates;
        }
        let exponent = m_exp / (p - 1);
        // tail = P(A): univariate in A, every term divisible by A
        for (m, _) in tail.terms() {
            let ok = (0..arity).all(|i| i == a || m.exp(i) == 0) && m.exp(a) >= 1;
            if !ok {
                continue 'candidates;
            }
        }
        // rewrite: B^p = A^((p-1)e) B - P
        let mut rewrite = MultiPoly::zero(roster, desc);
        let mut shift_exps = vec![0u16; arity];
        shift_exps[a] = m_exp;
        shift_exps[b] = 1;
        rewrite.add_term(Monomial::from_exps(&shift_exps), desc.one());
        let rewrite = rewrite.sub(&tail);
        return Ok(ShiftGenerator {
            b_var: b,
            a_var: a,
            exponent,
            power: p,
            rewrite,
        });
    }
    Err(ActionError::NotShiftShaped { gen: g.to_text() })
}

/// Standard model for the shift action: S = k[A1,B1,...,Ag,Bg] with
/// sigma(B_i) = B_i + A_i^(e_i) and ideal generators
/// B_i^p - A_i^((p-1)e_i) B_i + P_i(A_i), with P_i = A_i unless supplied.
pub fn shift_model(
    desc: &Arc<FieldDesc>,
    p: u32,
    exponents: &[u16],
    p_polys: Option<&[MultiPoly]>,
) -> Result<(QuotientPresentation, CyclicAction), ActionError> {
    let g = exponents.len();
    assert!(g >= 1);
    let mut names = Vec::new();
    for i in 1..=g {
        names.push(format!("A{i}"));
        names.push(format!("B{i}"));
    }
    let roster = VarRoster::new(names);
    let mut images = Vec::new();
    for (i, &e) in exponents.iter().enumerate() {
        let a = MultiPoly::var(&roster, desc, 2 * i);
        let b = MultiPoly::var(&roster, desc, 2 * i + 1);
        images.push(a.clone());
        images.push(b.add(&a.pow(e as u32)));
    }
    let action = CyclicAction::new(&roster, p, images)?;
    let mut gens = Vec::new();
    for i in 0..g {
        let a = MultiPoly::var(&roster, desc, 2 * i);
        let b = MultiPoly::var(&roster, desc, 2 * i + 1);
        let p_poly = match p_polys {
            Some(ps) => {
                assert_eq!(ps.len(), g);
                ps[i].clone()
            }
            None => a.clone(),
        };
        let f = b
            .pow(p)
            .sub(&a.pow((p - 1) * exponents[i] as u32).mul(&b))
            .add(&p_poly);
        gens.push(f);
    }
    let quotient = QuotientPresentation::new(&roster, desc, gens);
    Ok((quotient, action))
}

// ---------------------------------------------------------------------------
// bounded-degree invariant spaces
// ---------------------------------------------------------------------------

/// Basis of the invariant classes of degree <= d, as canonical normal-form
/// representatives. With `modulus = None` the ambient ring is free; otherwise
/// classes are represented by standard monomials of the degree-compatible
/// grevlex basis and "degree" means normal-form degree. The basis is the
/// reduced echelon kernel of sigma - id over the fixed monomial enumeration.
pub fn invariant_basis_bounded(
    act: &CyclicAction,
    modulus: Option<&GroebnerBasis>,
    d: u32,
) -> Vec<MultiPoly> {
    let roster = act.roster();
    let desc = act.sigma().images()[0].desc().clone();
    if let Some(gb) = modulus {
        assert!(gb.roster() == roster, "basis lives in the action's ring");
        assert_eq!(gb.order(), &MonomialOrder::GrevLex, "degree-compatible basis required");
    }
    let domain: Vec<Monomial> = match modulus {
        Some(gb) => gb.standard_monomials(d),
        None => monomials_up_to(roster.arity(), d),
    };
    let deltas: Vec<MultiPoly> = domain
        .iter()
        .map(|m| {
            let mp = MultiPoly::from_terms(roster, &desc, [(m.clone(), desc.one())]);
            let moved = act.apply(&mp).sub(&mp);
            match modulus {
                Some(gb) => gb.normal_form(&moved),
                None => moved,
            }
        })
        .collect();
    // coordinates over every monomial seen in the images
    let mut support: BTreeSet<Monomial> = BTreeSet::new();
    for delta in &deltas {
        for (m, _) in delta.terms() {
            support.insert(m.clone());
        }
    }
    let support: Vec<Monomial> = support.into_iter().collect();
    let kernel = if support.is_empty() {
        // sigma fixes every class: the kernel is everything
        (0..domain.len())
            .map(|i| {
                let mut row = vec![desc.zero(); domain.len()];
                row[i] = desc.one();
                row
            })
            .collect()
    } else {
        let rows: Vec<Vec<FieldElem>> = deltas
            .iter()
            .map(|delta| support.iter().map(|m| delta.coeff(m)).collect())
            .collect();
        linalg::left_kernel(&rows)
    };
    kernel
        .into_iter()
        .map(|combo| {
            let terms = domain
                .iter()
                .zip(&combo)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m.clone(), c.clone()));
            MultiPoly::from_terms(roster, &desc, terms)
        })
        .collect()
}

/// Outcome of comparing the invariants of S/I in degree <= d with the image
/// of the degree <= d invariants of S.
#[derive(Debug, Clone)]
pub struct SurjectivityReport {
    pub degree: u32,
    pub dim_quotient_invariants: usize,
    pub dim_image: usize,
    pub surjective_up_to_d: bool,
    /// Invariant classes outside the image, in the fixed basis order.
    pub witnesses: Vec<MultiPoly>,
}

/// Compares invariants of the quotient against the image of the ambient
/// invariants under the residue class map, in degrees <= d.
pub fn check_quotient_surjectivity(
    act: &CyclicAction,
    quotient: &mut QuotientPresentation,
    d: u32,
    limits: &Limits,
) -> Result<SurjectivityReport, ActionError> {
    let gb = quotient.groebner(&MonomialOrder::GrevLex, limits)?.clone();
    // the ideal must be stable under sigma
    for g in quotient.gens() {
        if !gb.contains(&act.apply(g)) {
            return Err(ActionError::IdealNotStable { gen: g.to_text() });
        }
    }
    let quotient_invariants = invariant_basis_bounded(act, Some(&gb), d);
    let free_invariants = invariant_basis_bounded(act, None, d);
    let images: Vec<MultiPoly> = free_invariants.iter().map(|f| gb.normal_form(f)).collect();

    let mut support: BTreeSet<Monomial> = BTreeSet::new();
    for p in quotient_invariants.iter().chain(&images) {
        for (m, _) in p.terms() {
            support.insert(m.clone());
        }
    }
    let support: Vec<Monomial> = support.into_iter().collect();
    let to_vec = |p: &MultiPoly| -> Vec<FieldElem> { support.iter().map(|m| p.coeff(m)).collect() };
    let mut witnesses = Vec::new();
    let mut dim_image = 0;
    if !support.is_empty() {
        let mut image_rows: Vec<Vec<FieldElem>> =
            images.iter().filter(|p| !p.is_zero()).map(to_vec).collect();
        let pivots = linalg::rref(&mut image_rows);
        dim_image = image_rows.len();
        for inv in &quotient_invariants {
            if !linalg::in_row_space(&image_rows, &pivots, &to_vec(inv)) {
                witnesses.push(inv.clone());
            }
        }
    }
    Ok(SurjectivityReport {
        degree: d,
        dim_quotient_invariants: quotient_invariants.len(),
        dim_image,
        surjective_up_to_d: witnesses.is_empty(),
        witnesses,
    })
}
