//! Invariant rings of products of elliptic curves under the sign involution
//! in characteristic 2: affine curve presentations, the trace generators f_M,
//! the relation ideal with its three generator families, the presentation map
//! psi and its kernel, minimal presentations and embedding dimensions, and
//! the function-field identities of the superspecial surface and threefold.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::action::{ActionError, CyclicAction};
use crate::field::{FieldDesc, FieldElem, FieldError};
use crate::groebner::{
    buchberger_cached, ideal_equal, EngineError, GbCache, IdealEqualityCert,
    Limits, QuotientPresentation,
};
use crate::linalg;
use crate::poly::{MonomialOrder, MultiPoly, RingMap, VarRoster};
use crate::report::{entry, CertEntry};

/// Subset naming and arithmetic supports up to nine factors; far beyond the
/// sizes any of the verifications run at.
pub const MAX_FACTORS: u32 = 9;

#[derive(Debug, Error)]
pub enum KummerError {
    #[error("invalid curve configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("embedding dimension certificates disagree: linear-part scan {linear} vs jacobian rank {jacobian}")]
    EmbdimMismatch { linear: usize, jacobian: usize },
}

// ---------------------------------------------------------------------------
// subsets of {1, ..., g}
// ---------------------------------------------------------------------------

/// Subset of {1, ..., g} as a bitmask; bit i-1 set iff i is an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub fn empty() -> SubsetMask {
        SubsetMask(0)
    }

    pub fn full(g: u32) -> SubsetMask {
        SubsetMask((1u32 << g) - 1)
    }

    pub fn from_bits(bits: u32) -> SubsetMask {
        SubsetMask(bits)
    }

    pub fn from_elements(elements: &[u32]) -> SubsetMask {
        let mut bits = 0;
        for &e in elements {
            assert!(e >= 1, "elements are 1-based");
            bits |= 1 << (e - 1);
        }
        SubsetMask(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn card(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, element: u32) -> bool {
        element >= 1 && self.0 & (1 << (element - 1)) != 0
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        (1..=32).filter(move |&e| self.contains(e))
    }

    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersect(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    pub fn minus(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    /// (M', M'') = (M restricted to the ordinary factors 1..r, the rest).
    pub fn split(self, r: u32) -> (SubsetMask, SubsetMask) {
        let low = (1u32 << r) - 1;
        (SubsetMask(self.0 & low), SubsetMask(self.0 & !low))
    }

    /// All proper subsets, ascending by bitmask (starts with the empty set).
    pub fn proper_subsets(self) -> impl Iterator<Item = SubsetMask> {
        let m = self.0;
        (0..m).filter(move |&x| x & m == x).map(SubsetMask)
    }

    /// All subsets of {1..g}, ascending by bitmask.
    pub fn all(g: u32) -> impl Iterator<Item = SubsetMask> {
        (0..(1u32 << g)).map(SubsetMask)
    }

    /// Concatenated element digits; the empty set is "0".
    pub fn label(self) -> String {
        if self.is_empty() {
            return "0".to_string();
        }
        self.elements().map(|e| e.to_string()).collect()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let elems: Vec<String> = self.elements().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", elems.join(","))
    }
}

// ---------------------------------------------------------------------------
// curve configuration and presentation
// ---------------------------------------------------------------------------

/// A product of g elliptic curves: factors 1..r ordinary with the given
/// nonzero j-invariants, factors r+1..g supersingular. Characteristic 2.
#[derive(Debug, Clone)]
pub struct CurveConfig {
    field: Arc<FieldDesc>,
    g: u32,
    r: u32,
    j: Vec<FieldElem>,
}

impl CurveConfig {
    pub fn new(field: &Arc<FieldDesc>, g: u32, r: u32, j: Vec<FieldElem>) -> Result<CurveConfig, KummerError> {
        if field.characteristic() != 2 {
            return Err(KummerError::BadConfig(
                "curve presentations require characteristic 2".into(),
            ));
        }
        if !(1..=MAX_FACTORS).contains(&g) {
            return Err(KummerError::BadConfig(format!(
                "need 1 <= g <= {MAX_FACTORS}, got {g}"
            )));
        }
        if r > g {
            return Err(KummerError::BadConfig(format!("r = {r} exceeds g = {g}")));
        }
        if j.len() != r as usize {
            return Err(KummerError::BadConfig(format!(
                "expected {r} j-invariants, got {}",
                j.len()
            )));
        }
        for ji in &j {
            if ji.is_zero() {
                return Err(KummerError::BadConfig(
                    "ordinary factors need a nonzero j-invariant".into(),
                ));
            }
            if ji.desc() != field {
                return Err(KummerError::BadConfig(
                    "j-invariants must live in the configured field".into(),
                ));
            }
        }
        Ok(CurveConfig {
            field: Arc::clone(field),
            g,
            r,
            j,
        })
    }

    /// All j-invariants equal to 1, matching the normal form P_i = X_i^3 + X_i.
    pub fn with_unit_j(field: &Arc<FieldDesc>, g: u32, r: u32) -> Result<CurveConfig, KummerError> {
        let j = (0..r).map(|_| field.one()).collect();
        CurveConfig::new(field, g, r, j)
    }

    pub fn field(&self) -> &Arc<FieldDesc> {
        &self.field
    }

    pub fn genus_count(&self) -> u32 {
        self.g
    }

    pub fn ordinary_count(&self) -> u32 {
        self.r
    }

    pub fn supersingular_count(&self) -> u32 {
        self.g - self.r
    }

    pub fn j_invariants(&self) -> &[FieldElem] {
        &self.j
    }

    /// gamma_i with gamma_i^2 = j_i (unique in characteristic 2).
    pub fn gammas(&self) -> Vec<FieldElem> {
        self.j.iter().map(|ji| ji.sqrt().expect("char 2")).collect()
    }

    /// Roster x1,y1,...,xr,yr,v(r+1),w(r+1),...,vg,wg.
    pub fn curve_roster(&self) -> Arc<VarRoster> {
        let mut names = Vec::new();
        for i in 1..=self.r {
            names.push(format!("x{i}"));
            names.push(format!("y{i}"));
        }
        for j in self.r + 1..=self.g {
            names.push(format!("v{j}"));
            names.push(format!("w{j}"));
        }
        VarRoster::new(names)
    }

    /// Index of x_i / v_j in the curve roster (first coordinate of factor i).
    pub fn base_var(&self, factor: u32) -> usize {
        (2 * (factor - 1)) as usize
    }

    /// Index of y_i / w_j in the curve roster.
    pub fn fiber_var(&self, factor: u32) -> usize {
        (2 * (factor - 1) + 1) as usize
    }
}

/// The affine neighbourhood of the chosen 2-division point: its coordinate
/// ring presentation and the induced involution.
pub fn curve_presentation(cfg: &CurveConfig) -> (QuotientPresentation, CyclicAction) {
    let roster = cfg.curve_roster();
    let desc = cfg.field();
    let gammas = cfg.gammas();
    let mut gens = Vec::new();
    let mut images = Vec::new();
    for i in 1..=cfg.g {
        let base = MultiPoly::var(&roster, desc, cfg.base_var(i));
        let fiber = MultiPoly::var(&roster, desc, cfg.fiber_var(i));
        if i <= cfg.r {
            // y^2 + x y + gamma x^3 + gamma^-2 x
            let gamma = &gammas[(i - 1) as usize];
            let gen = fiber
                .pow(2)
                .add(&base.mul(&fiber))
                .add(&base.pow(3).scale(gamma))
                .add(&base.scale(&gamma.inv().pow(2)));
            gens.push(gen);
            images.push(base.clone());
            images.push(fiber.add(&base));
        } else {
            // w^2 + v^2 w + v
            let gen = fiber.pow(2).add(&base.pow(2).mul(&fiber)).add(&base);
            gens.push(gen);
            images.push(base.clone());
            images.push(fiber.add(&base.pow(2)));
        }
    }
    let quotient = QuotientPresentation::new(&roster, desc, gens);
    let action = CyclicAction::new(&roster, 2, images).expect("involution has order 2");
    (quotient, action)
}

// ---------------------------------------------------------------------------
// invariant generators f_M
// ---------------------------------------------------------------------------

/// Trace generators of the invariant ring, indexed by subsets, plus the
/// supersingular coordinates v_j which generate alongside them.
#[derive(Debug, Clone)]
pub struct InvariantGenerators {
    pub by_mask: BTreeMap<SubsetMask, MultiPoly>,
    pub extra: Vec<MultiPoly>,
}

/// f_M = Tr(prod_{i in M'} y_i * prod_{j in M''} w_j), computed through the
/// trace operator and cross-checked against the closed subset-sum form.
pub fn invariant_generators(cfg: &CurveConfig) -> InvariantGenerators {
    let (quotient, action) = curve_presentation(cfg);
    let roster = quotient.roster();
    let desc = cfg.field();
    let mut by_mask = BTreeMap::new();
    for mask in SubsetMask::all(cfg.g) {
        let mut product = MultiPoly::one(roster, desc);
        for i in mask.elements() {
            product = product.mul(&MultiPoly::var(roster, desc, cfg.fiber_var(i)));
        }
        let traced = action.trace(&product);
        let closed = closed_form_generator(cfg, roster, mask);
        assert_eq!(
            traced, closed,
            "trace generator and closed form disagree for M = {mask}"
        );
        by_mask.insert(mask, traced);
    }
    let extra = (cfg.r + 1..=cfg.g)
        .map(|j| MultiPoly::var(roster, desc, cfg.base_var(j)))
        .collect();
    InvariantGenerators { by_mask, extra }
}

/// f_M = sum over proper subsets L of M of
/// prod_{i in (M\L)'} x_i * prod_{j in (M\L)''} v_j^2 * prod_{l in L'} y_l *
/// prod_{l in L''} w_l; the empty set gives f_empty = 0.
fn closed_form_generator(cfg: &CurveConfig, roster: &Arc<VarRoster>, mask: SubsetMask) -> MultiPoly {
    let desc = cfg.field();
    let mut acc = MultiPoly::zero(roster, desc);
    for sub in mask.proper_subsets() {
        let rest = mask.minus(sub);
        let mut term = MultiPoly::one(roster, desc);
        for i in rest.elements() {
            let base = MultiPoly::var(roster, desc, cfg.base_var(i));
            term = if i <= cfg.r {
                term.mul(&base)
            } else {
                term.mul(&base.pow(2))
            };
        }
        for l in sub.elements() {
            term = term.mul(&MultiPoly::var(roster, desc, cfg.fiber_var(l)));
        }
        acc = acc.add(&term);
    }
    acc
}

// ---------------------------------------------------------------------------
// the relation ideal J
// ---------------------------------------------------------------------------

/// Presentation data: roster {T_M, X_i, V_j}, the three relation families
/// and the square roots gamma_i of the j-invariants.
#[derive(Debug, Clone)]
pub struct RelationSet {
    config: CurveConfig,
    roster: Arc<VarRoster>,
    gamma: Vec<FieldElem>,
    trivial: Vec<MultiPoly>,
    sum: Vec<(SubsetMask, MultiPoly)>,
    product: Vec<((SubsetMask, SubsetMask), MultiPoly)>,
}

impl RelationSet {
    pub fn config(&self) -> &CurveConfig {
        &self.config
    }

    pub fn roster(&self) -> &Arc<VarRoster> {
        &self.roster
    }

    pub fn gamma(&self) -> &[FieldElem] {
        &self.gamma
    }

    pub fn trivial(&self) -> &[MultiPoly] {
        &self.trivial
    }

    pub fn sum(&self) -> &[(SubsetMask, MultiPoly)] {
        &self.sum
    }

    pub fn product(&self) -> &[((SubsetMask, SubsetMask), MultiPoly)] {
        &self.product
    }

    /// Every generator in canonical family order.
    pub fn all_generators(&self) -> Vec<MultiPoly> {
        let mut out = self.trivial.clone();
        out.extend(self.sum.iter().map(|(_, p)| p.clone()));
        out.extend(self.product.iter().map(|(_, p)| p.clone()));
        out
    }

    /// Family-tagged generators for certificates and text export.
    pub fn tagged_generators(&self) -> Vec<(String, MultiPoly)> {
        let mut out = Vec::new();
        for (i, p) in self.trivial.iter().enumerate() {
            out.push((format!("trivial[{i}]"), p.clone()));
        }
        for (d, p) in &self.sum {
            out.push((format!("sum[D={d}]"), p.clone()));
        }
        for ((a, b), p) in &self.product {
            out.push((format!("product[A={a},B={b}]"), p.clone()));
        }
        out
    }

    /// Plain-text export, one family-tagged generator per line.
    pub fn to_text_lines(&self) -> Vec<String> {
        self.tagged_generators()
            .into_iter()
            .map(|(tag, p)| format!("{tag}: {}", p.to_text()))
            .collect()
    }

    /// Index of T_M in the presentation roster.
    pub fn t_var(&self, mask: SubsetMask) -> usize {
        mask.bits() as usize
    }

    /// Index of X_i (i <= r) or V_j (j > r) in the presentation roster.
    pub fn coord_var(&self, factor: u32) -> usize {
        (1usize << self.config.g) + (factor - 1) as usize
    }

    /// The presentation map T_M -> f_M, X_i -> x_i, V_j -> v_j into the
    /// curve ring.
    pub fn psi(&self) -> RingMap {
        let cfg = &self.config;
        let gens = invariant_generators(cfg);
        let curve_roster = gens.by_mask.values().next().unwrap().roster().clone();
        let desc = cfg.field();
        let mut images = Vec::new();
        for mask in SubsetMask::all(cfg.g) {
            images.push(gens.by_mask[&mask].clone());
        }
        for i in 1..=cfg.g {
            images.push(MultiPoly::var(&curve_roster, desc, cfg.base_var(i)));
        }
        RingMap::new(&self.roster, images)
    }
}

/// The relation families of the presentation of the invariant ring:
/// (1) T_0, X_i - T_{i}, V_j^2 - T_{j};
/// (2) per D with |D| >= 3: sum over L proper in D of X_(D'\L') V^2_(D''\L'') T_L;
/// (3) per unordered pair A, B with |A|, |B| >= 2 (including A = B):
///     T_A T_B + sum over L proper in A cap B of X V^2 P_L T_((A u B)\L)
///     + P_(A cap B) * sum over M proper in A\B of X V^2 T_(M u (B\A)).
pub fn relation_set(cfg: &CurveConfig) -> RelationSet {
    let g = cfg.g;
    let r = cfg.r;
    let desc = cfg.field();
    let gamma = cfg.gammas();
    let mut names: Vec<String> = SubsetMask::all(g).map(|m| format!("T{}", m.label())).collect();
    for i in 1..=r {
        names.push(format!("X{i}"));
    }
    for j in r + 1..=g {
        names.push(format!("V{j}"));
    }
    let roster = VarRoster::new(names);
    let coord = |factor: u32| (1usize << g) + (factor - 1) as usize;
    let t_var = |mask: SubsetMask| mask.bits() as usize;

    // X_(mask') V^2_(mask'')
    let xv_product = |mask: SubsetMask| -> MultiPoly {
        let mut acc = MultiPoly::one(&roster, desc);
        for i in mask.elements() {
            let var = MultiPoly::var(&roster, desc, coord(i));
            acc = if i <= r { acc.mul(&var) } else { acc.mul(&var.pow(2)) };
        }
        acc
    };
    // P_i = gamma_i X_i^3 + gamma_i^-2 X_i (ordinary), V_j (supersingular)
    let p_single = |i: u32| -> MultiPoly {
        let var = MultiPoly::var(&roster, desc, coord(i));
        if i <= r {
            let gi = &gamma[(i - 1) as usize];
            var.pow(3).scale(gi).add(&var.scale(&gi.inv().pow(2)))
        } else {
            var
        }
    };
    let p_product = |mask: SubsetMask| -> MultiPoly {
        let mut acc = MultiPoly::one(&roster, desc);
        for i in mask.elements() {
            acc = acc.mul(&p_single(i));
        }
        acc
    };
    let t_poly = |mask: SubsetMask| MultiPoly::var(&roster, desc, t_var(mask));

    let mut trivial = vec![t_poly(SubsetMask::empty())];
    for i in 1..=r {
        let x = MultiPoly::var(&roster, desc, coord(i));
        trivial.push(x.sub(&t_poly(SubsetMask::from_elements(&[i]))));
    }
    for j in r + 1..=g {
        let v = MultiPoly::var(&roster, desc, coord(j));
        trivial.push(v.pow(2).sub(&t_poly(SubsetMask::from_elements(&[j]))));
    }

    let mut sum = Vec::new();
    for d in SubsetMask::all(g).filter(|m| m.card() >= 3) {
        let mut acc = MultiPoly::zero(&roster, desc);
        for l in d.proper_subsets() {
            acc = acc.add(&xv_product(d.minus(l)).mul(&t_poly(l)));
        }
        sum.push((d, acc));
    }

    let mut product = Vec::new();
    let big: Vec<SubsetMask> = SubsetMask::all(g).filter(|m| m.card() >= 2).collect();
    for (ai, &a) in big.iter().enumerate() {
        for &b in &big[ai..] {
            let both = a.intersect(b);
            let mut acc = t_poly(a).mul(&t_poly(b));
            for l in both.proper_subsets() {
                let term = xv_product(both.minus(l))
                    .mul(&p_product(l))
                    .mul(&t_poly(a.union(b).minus(l)));
                acc = acc.add(&term);
            }
            let a_only = a.minus(b);
            if !a_only.is_empty() {
                let mut inner = MultiPoly::zero(&roster, desc);
                for m in a_only.proper_subsets() {
                    inner = inner.add(
                        &xv_product(a_only.minus(m)).mul(&t_poly(m.union(b.minus(a)))),
                    );
                }
                acc = acc.add(&p_product(both).mul(&inner));
            }
            product.push(((a, b), acc));
        }
    }

    RelationSet {
        config: cfg.clone(),
        roster,
        gamma,
        trivial,
        sum,
        product,
    }
}

// ---------------------------------------------------------------------------
// containment and kernel verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub ok: bool,
    pub entries: Vec<CertEntry>,
}

/// Checks that every relation maps to zero under psi, by reducing the image
/// modulo the curve ideal.
pub fn verify_containment(cfg: &CurveConfig, limits: &Limits) -> Result<ContainmentReport, KummerError> {
    let rs = relation_set(cfg);
    let (mut quotient, _action) = curve_presentation(cfg);
    let gb = quotient.groebner(&MonomialOrder::GrevLex, limits)?;
    let psi = rs.psi();
    let mut entries = Vec::new();
    for (tag, relation) in rs.tagged_generators() {
        let nf = gb.normal_form(&psi.apply(&relation));
        let ok = nf.is_zero();
        entries.push(entry(
            tag,
            ok,
            if ok {
                "psi-image reduces to 0".to_string()
            } else {
                format!("psi-image reduces to {}", nf.to_text())
            },
        ));
    }
    Ok(ContainmentReport {
        ok: entries.iter().all(|e| e.ok),
        entries,
    })
}

#[derive(Debug)]
pub struct KernelReport {
    pub equal: bool,
    /// Generators of ker(psi) found by elimination, in the presentation ring.
    pub kernel_gens: Vec<MultiPoly>,
    pub certificate: IdealEqualityCert,
}

/// Default resource limits for the kernel computation: ten minutes and
/// intermediate degree at most 40.
pub fn default_kernel_limits() -> Limits {
    Limits::new(Some(std::time::Duration::from_secs(600)), Some(40))
}

/// Computes ker(psi) by eliminating the curve variables from the combined
/// ideal I + (T_M - f_M) + (X_i - x_i) + (V_j - v_j), then certifies ideal
/// equality with the relation families both ways.
pub fn verify_kernel(
    cfg: &CurveConfig,
    limits: &Limits,
    cache: Option<&GbCache>,
) -> Result<KernelReport, KummerError> {
    let rs = relation_set(cfg);
    let (quotient, _action) = curve_presentation(cfg);
    let curve_roster = quotient.roster().clone();
    let desc = cfg.field();
    let psi = rs.psi();

    let mut names: Vec<String> = curve_roster.names().to_vec();
    names.extend(rs.roster().names().iter().cloned());
    let combined = VarRoster::new(names);
    let n_curve = curve_roster.arity();
    let curve_positions: Vec<usize> = (0..n_curve).collect();
    let pres_positions: Vec<usize> = (0..rs.roster().arity()).map(|i| n_curve + i).collect();

    let mut ideal: Vec<MultiPoly> = quotient
        .gens()
        .iter()
        .map(|p| p.embed(&combined, &curve_positions))
        .collect();
    for (idx, image) in psi.images().iter().enumerate() {
        let var = MultiPoly::var(&combined, desc, n_curve + idx);
        ideal.push(var.sub(&image.embed(&combined, &curve_positions)));
    }

    let order = MonomialOrder::block(curve_positions.clone());
    let gb = buchberger_cached(&ideal, &order, limits, cache)?;
    let kernel_gens: Vec<MultiPoly> = gb
        .gens()
        .iter()
        .filter(|p| {
            p.terms()
                .all(|(m, _)| curve_positions.iter().all(|&v| m.exp(v) == 0))
        })
        .map(|p| p.project(rs.roster(), &pres_positions))
        .collect();

    let certificate = ideal_equal(
        &kernel_gens,
        &rs.all_generators(),
        &MonomialOrder::GrevLex,
        limits,
    )?;
    Ok(KernelReport {
        equal: certificate.equal,
        kernel_gens,
        certificate,
    })
}

// ---------------------------------------------------------------------------
// minimal presentation and embedding dimension
// ---------------------------------------------------------------------------

/// Eliminates T_0 and the singleton T's: T_{i} -> X_i, T_{j} -> V_j^2. The
/// resulting roster has 2^g - 1 variables and carries the rewritten sum and
/// product families.
pub fn minimal_presentation(rs: &RelationSet) -> QuotientPresentation {
    let cfg = rs.config();
    let g = cfg.genus_count();
    let r = cfg.ordinary_count();
    let desc = cfg.field();
    let masks: Vec<SubsetMask> = SubsetMask::all(g).filter(|m| m.card() >= 2).collect();
    let mut names: Vec<String> = masks.iter().map(|m| format!("T{}", m.label())).collect();
    for i in 1..=r {
        names.push(format!("X{i}"));
    }
    for j in r + 1..=g {
        names.push(format!("V{j}"));
    }
    let roster = VarRoster::new(names);
    let coord = |factor: u32| masks.len() + (factor - 1) as usize;

    // substitution from the full presentation ring
    let mut images = Vec::new();
    for mask in SubsetMask::all(g) {
        let image = if mask.is_empty() {
            MultiPoly::zero(&roster, desc)
        } else if mask.card() == 1 {
            let factor = mask.elements().next().unwrap();
            let var = MultiPoly::var(&roster, desc, coord(factor));
            if factor <= r {
                var
            } else {
                var.pow(2)
            }
        } else {
            let pos = masks.iter().position(|m| *m == mask).unwrap();
            MultiPoly::var(&roster, desc, pos)
        };
        images.push(image);
    }
    for factor in 1..=g {
        images.push(MultiPoly::var(&roster, desc, coord(factor)));
    }
    let subst = RingMap::new(rs.roster(), images);

    let mut gens = Vec::new();
    for (_, p) in rs.sum() {
        gens.push(subst.apply(p));
    }
    for (_, p) in rs.product() {
        gens.push(subst.apply(p));
    }
    QuotientPresentation::new(&roster, desc, gens)
}

#[derive(Debug, Clone)]
pub struct EmbdimReport {
    pub embdim: usize,
    pub minimal_vars: usize,
    pub minimal_linear_rank: usize,
    pub full_vars: usize,
    pub jacobian_rank: usize,
    pub entries: Vec<CertEntry>,
}

/// Embedding dimension of the completed local ring at the origin, certified
/// two independent ways: (a) every minimal-presentation generator has zero
/// constant and linear part; (b) the Jacobian rank at the origin of the full
/// generator list.
pub fn embedding_dimension(rs: &RelationSet) -> Result<EmbdimReport, KummerError> {
    let minimal = minimal_presentation(rs);
    let min_vars = minimal.roster().arity();

    let mut entries = Vec::new();
    let mut linear_rows = Vec::new();
    for (i, gen) in minimal.gens().iter().enumerate() {
        let const_zero = gen.constant_term().is_zero();
        let lin = gen.linear_part();
        let lin_zero = lin.iter().all(|c| c.is_zero());
        if !lin_zero {
            linear_rows.push(lin);
        }
        entries.push(entry(
            format!("minimal-gen[{i}] vanishes to order 2"),
            const_zero && lin_zero,
            gen.to_text(),
        ));
    }
    let minimal_linear_rank = linalg::rank(linear_rows);
    let embdim_linear = min_vars - minimal_linear_rank;

    // independent route: formal Jacobian of the full generator list at 0
    let full = rs.all_generators();
    let full_vars = rs.roster().arity();
    let jacobian_rows: Vec<Vec<FieldElem>> = full
        .iter()
        .map(|gen| {
            (0..full_vars)
                .map(|v| gen.partial_derivative(v).constant_term())
                .collect()
        })
        .collect();
    let jacobian_rank = linalg::rank(jacobian_rows);
    let embdim_jacobian = full_vars - jacobian_rank;

    entries.push(entry(
        "linear-part scan",
        true,
        format!("{min_vars} variables, linear rank {minimal_linear_rank}, embdim {embdim_linear}"),
    ));
    entries.push(entry(
        "jacobian rank at origin",
        embdim_jacobian == embdim_linear,
        format!("{full_vars} variables, rank {jacobian_rank}, embdim {embdim_jacobian}"),
    ));
    if embdim_linear != embdim_jacobian {
        return Err(KummerError::EmbdimMismatch {
            linear: embdim_linear,
            jacobian: embdim_jacobian,
        });
    }
    Ok(EmbdimReport {
        embdim: embdim_linear,
        minimal_vars: min_vars,
        minimal_linear_rank,
        full_vars,
        jacobian_rank,
        entries,
    })
}

// ---------------------------------------------------------------------------
// the isomorphism Phi and the induced involution (rank-one supersingular case)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct LemmaPhiReport {
    pub ok: bool,
    pub entries: Vec<CertEntry>,
}

/// Verifies the six identities behind the two-generator description of the
/// supersingular chart: in `k[x,z,u]/(z + z^2 + x^3, u(z+1) - 1)` with
/// iota*: x -> xu, z -> zu, u -> z + 1 and Phi: v -> x^2 u, w -> x u.
pub fn lemma_phi_check(desc: &Arc<FieldDesc>) -> Result<LemmaPhiReport, KummerError> {
    if desc.characteristic() != 2 {
        return Err(KummerError::BadConfig(
            "the chart identities live in characteristic 2".into(),
        ));
    }
    let xzu = VarRoster::new(vec!["x", "z", "u"]);
    let parse = |s: &str| MultiPoly::parse(&xzu, desc, s).expect("fixed identity text");
    let ideal = vec![parse("z + z^2 + x^3"), parse("u*z + u + 1")];
    let mut quotient = QuotientPresentation::new(&xzu, desc, ideal);
    let gb = quotient.groebner(&MonomialOrder::GrevLex, &Limits::none())?.clone();

    let vw = VarRoster::new(vec!["v", "w"]);
    let phi = RingMap::new(&vw, vec![parse("x^2*u"), parse("x*u")]);
    let iota = RingMap::new(&xzu, vec![parse("x*u"), parse("z*u"), parse("z + 1")]);

    let pv = |s: &str| MultiPoly::parse(&vw, desc, s).expect("fixed identity text");
    let checks: Vec<(String, MultiPoly)> = vec![
        (
            "Phi(w^2 + v^2*w + v) = 0".into(),
            phi.apply(&pv("w^2 + v^2*w + v")),
        ),
        (
            "Phi(v*w + 1) = (z+1)^-1".into(),
            phi.apply(&pv("v*w + 1")).sub(&parse("u")),
        ),
        (
            "Phi(v*w + v^3) = z".into(),
            phi.apply(&pv("v*w + v^3")).sub(&parse("z")),
        ),
        (
            "Phi(w*(v*w + v^3 + 1)) = x".into(),
            phi.apply(&pv("w*(v*w + v^3 + 1)")).sub(&parse("x")),
        ),
        (
            "iota*(Phi(v)) = Phi(v)".into(),
            iota.apply(phi.image_of(0)).sub(phi.image_of(0)),
        ),
        (
            "iota*(Phi(w)) = Phi(w + v^2)".into(),
            iota.apply(phi.image_of(1)).sub(&phi.apply(&pv("w + v^2"))),
        ),
    ];
    let entries: Vec<CertEntry> = checks
        .into_iter()
        .map(|(name, poly)| {
            let nf = gb.normal_form(&poly);
            let ok = nf.is_zero();
            let detail = if ok {
                "normal form 0".to_string()
            } else {
                format!("normal form {}", nf.to_text())
            };
            entry(name, ok, detail)
        })
        .collect();
    Ok(LemmaPhiReport {
        ok: entries.iter().all(|e| e.ok),
        entries,
    })
}

// ---------------------------------------------------------------------------
// function-field identities (superspecial surface and threefold)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ThreefoldReport {
    pub ok: bool,
    pub entries: Vec<CertEntry>,
}

/// In the superspecial threefold's minimal presentation (g=3, r=0), the
/// variables T23 and T123 are rational in the remaining ones; verified with
/// denominators cleared, plus a perturbed control that must not reduce to 0.
pub fn function_field_identities(desc: &Arc<FieldDesc>, limits: &Limits) -> Result<ThreefoldReport, KummerError> {
    let cfg = CurveConfig::with_unit_j(desc, 3, 0)?;
    let rs = relation_set(&cfg);
    let mut minimal = minimal_presentation(&rs);
    let gb = minimal.groebner(&MonomialOrder::GrevLex, limits)?.clone();
    let roster = minimal.roster().clone();
    let parse = |s: &str| MultiPoly::parse(&roster, desc, s).expect("fixed identity text");

    let first = parse("V1^2*T23 + V2^2*T13 + V3^2*T12 + V1^2*V2^2*V3^2");
    let second = parse("V1^2*T123 + T12*T13 + V1*V2^2*V3^2");
    let perturbed = parse("V1^2*T23 + V2^2*T13 + V3^2*T12");
    let mut entries = Vec::new();
    for (name, poly, expect_zero) in [
        ("V1^2*T23 = V2^2*T13 + V3^2*T12 + V1^2*V2^2*V3^2", &first, true),
        ("V1^2*T123 = T12*T13 + V1*V2^2*V3^2", &second, true),
        ("control: dropping the product term breaks the identity", &perturbed, false),
    ] {
        let nf = gb.normal_form(poly);
        let ok = nf.is_zero() == expect_zero;
        entries.push(entry(
            name,
            ok,
            format!("normal form {}", nf.to_text()),
        ));
    }
    Ok(ThreefoldReport {
        ok: entries.iter().all(|e| e.ok),
        entries,
    })
}

// ---------------------------------------------------------------------------
// the rational parametrization of the superspecial Kummer surface
// ---------------------------------------------------------------------------

/// Rational function as a numerator/denominator pair; no gcd cancellation,
/// which keeps the arithmetic exact and the degrees modest at this scale.
#[derive(Debug, Clone)]
struct RatFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFn {
    fn from_poly(p: MultiPoly) -> RatFn {
        let one = MultiPoly::one(p.roster(), p.desc());
        RatFn { num: p, den: one }
    }

    fn add(&self, other: &RatFn) -> RatFn {
        RatFn {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    fn mul(&self, other: &RatFn) -> RatFn {
        RatFn {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    fn inv(&self) -> RatFn {
        assert!(!self.num.is_zero(), "inverting the zero function");
        RatFn {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    fn pow(&self, e: u32) -> RatFn {
        RatFn {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShiodaReport {
    pub ok: bool,
    pub entries: Vec<CertEntry>,
}

/// Substitutes the rational parametrization of the superspecial Kummer
/// surface into its defining relation T^2 + V1^2 V2^2 T + V1^4 V2 + V2^4 V1
/// and checks that the cleared numerator vanishes identically; also for the
/// conjugate cube root, with omega = 1 as a nonvanishing control.
pub fn shioda_parametrization_check(desc: &Arc<FieldDesc>) -> Result<ShiodaReport, KummerError> {
    if desc.characteristic() != 2 {
        return Err(KummerError::BadConfig(
            "the parametrization lives in characteristic 2".into(),
        ));
    }
    let omega = desc.primitive_cube_root()?;
    let omega2 = omega.mul(&omega);
    let mut entries = Vec::new();
    for (name, zeta, expect_zero) in [
        ("numerator vanishes for omega", omega.clone(), true),
        ("numerator vanishes for omega^2 (V1, V2 swapped)", omega2, true),
        ("control: omega = 1 does not parametrize the surface", desc.one(), false),
    ] {
        let numerator = shioda_numerator(desc, &zeta);
        let ok = numerator.is_zero() == expect_zero;
        let detail = if numerator.is_zero() {
            "numerator 0".to_string()
        } else {
            format!("numerator has {} terms", numerator.num_terms())
        };
        entries.push(entry(name, ok, detail));
    }
    Ok(ShiodaReport {
        ok: entries.iter().all(|e| e.ok),
        entries,
    })
}

/// Numerator of T^2 + V1^2 V2^2 T + V1^4 V2 + V2^4 V1 after substituting
/// V1 = (r^2+s)/(zeta r^2 s + r + zeta^2 s^2), V2 the zeta^2-conjugate and
/// T = V1^2 V2^2 r (V1^-1 + zeta s).
fn shioda_numerator(desc: &Arc<FieldDesc>, zeta: &FieldElem) -> MultiPoly {
    let rs = VarRoster::new(vec!["r", "s"]);
    let rv = MultiPoly::var(&rs, desc, 0);
    let sv = MultiPoly::var(&rs, desc, 1);
    let zeta2 = zeta.mul(zeta);
    let n = rv.pow(2).add(&sv);
    let d1 = rv.pow(2).mul(&sv).scale(zeta).add(&rv).add(&sv.pow(2).scale(&zeta2));
    let d2 = rv.pow(2).mul(&sv).scale(&zeta2).add(&rv).add(&sv.pow(2).scale(zeta));
    let v1 = RatFn {
        num: n.clone(),
        den: d1,
    };
    let v2 = RatFn {
        num: n,
        den: d2,
    };
    let t = v1
        .pow(2)
        .mul(&v2.pow(2))
        .mul(&RatFn::from_poly(rv))
        .mul(&v1.inv().add(&RatFn::from_poly(sv.scale(zeta))));
    let relation = t
        .pow(2)
        .add(&v1.pow(2).mul(&v2.pow(2)).mul(&t))
        .add(&v1.pow(4).mul(&v2))
        .add(&v2.pow(4).mul(&v1));
    relation.num
}
