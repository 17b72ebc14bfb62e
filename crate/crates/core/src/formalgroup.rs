//! Combinatorial enumeration of the symmetric formal-group decompositions
//! available to abelian varieties, and the torsion-count classification.
//!
//! Decompositions are isogeny-class labels only; no formal-group-law
//! arithmetic is involved.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormalGroupError {
    #[error("a dimension-{g} variety with 2^{rank} torsion points is not determined by the torsion count")]
    NotDeterminedByTorsion { g: u32, rank: u32 },
}

/// Multiplicity of the symmetric pair G_{n,m} + G_{m,n} with m > n >= 1 and
/// gcd(n, m) = 1; the pair contributes n + m to the dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PairMultiplicity {
    pub n: u32,
    pub m: u32,
    pub count: u32,
}

/// Symmetric decomposition G_{1,0}^r + G_{1,1}^s + sum of symmetric pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct IsoDecomposition {
    /// Multiplicity of G_{1,0} (the multiplicative part).
    pub g10: u32,
    /// Multiplicity of G_{1,1} (the one-dimensional local-local part).
    pub g11: u32,
    /// Symmetric pairs, sorted by (n, m).
    pub pairs: Vec<PairMultiplicity>,
}

impl IsoDecomposition {
    pub fn dimension(&self) -> u32 {
        self.g10
            + self.g11
            + self
                .pairs
                .iter()
                .map(|p| p.count * (p.n + p.m))
                .sum::<u32>()
    }

    /// G_{1,1}^2 and beyond contains several isomorphism classes within one
    /// isogeny class, so the label alone does not pin the singularity type.
    pub fn iso_class_ambiguous(&self) -> bool {
        self.g11 >= 2
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        let power = |base: &str, e: u32| -> String {
            if e == 1 {
                base.to_string()
            } else {
                format!("{base}^{e}")
            }
        };
        if self.g10 > 0 {
            parts.push(power("G_{1,0}", self.g10));
        }
        if self.g11 > 0 {
            parts.push(power("G_{1,1}", self.g11));
        }
        for p in &self.pairs {
            let base = format!("(G_{{{n},{m}}} + G_{{{m},{n}}})", n = p.n, m = p.m);
            parts.push(power(&base, p.count));
        }
        parts.join(" + ")
    }
}

impl fmt::Display for IsoDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All symmetric decompositions of dimension g, lexicographically ascending
/// on (g10, g11, pairs).
pub fn enumerate_decompositions(g: u32) -> Vec<IsoDecomposition> {
    assert!(g >= 1);
    let pair_types: Vec<(u32, u32)> = (1..=g)
        .flat_map(|n| ((n + 1)..=g).map(move |m| (n, m)))
        .filter(|&(n, m)| n + m <= g && gcd(n, m) == 1)
        .collect();
    let mut out = Vec::new();
    // choose multiplicities for each pair type, remainder split into r + s
    fn assign(
        pair_types: &[(u32, u32)],
        idx: usize,
        left: u32,
        chosen: &mut Vec<PairMultiplicity>,
        out: &mut Vec<IsoDecomposition>,
    ) {
        if idx == pair_types.len() {
            for g10 in 0..=left {
                out.push(IsoDecomposition {
                    g10,
                    g11: left - g10,
                    pairs: chosen.clone(),
                });
            }
            return;
        }
        let (n, m) = pair_types[idx];
        let weight = n + m;
        let mut used = 0;
        let mut count = 0;
        while used <= left {
            if count > 0 {
                chosen.push(PairMultiplicity { n, m, count });
            }
            assign(pair_types, idx + 1, left - used, chosen, out);
            if count > 0 {
                chosen.pop();
            }
            count += 1;
            used = count * weight;
        }
    }
    assign(&pair_types, 0, g, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The decomposition forced by the 2-torsion count 2^rank: full torsion
/// gives G_{1,0}^g, corank one gives G_{1,1} + G_{1,0}^(g-1); below that the
/// torsion count does not determine the label.
pub fn decomposition_from_torsion(g: u32, rank: u32) -> Result<IsoDecomposition, FormalGroupError> {
    assert!(g >= 1);
    if rank == g {
        Ok(IsoDecomposition {
            g10: g,
            g11: 0,
            pairs: Vec::new(),
        })
    } else if rank + 1 == g {
        Ok(IsoDecomposition {
            g10: g - 1,
            g11: 1,
            pairs: Vec::new(),
        })
    } else {
        Err(FormalGroupError::NotDeterminedByTorsion { g, rank })
    }
}
