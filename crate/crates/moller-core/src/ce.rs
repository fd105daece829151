//! Truncated Chevalley-Eilenberg algebra of a bracket structure: the free
//! graded-symmetric algebra on the dual generator complex, carrying the
//! order-0 differential (derivation extension of the dual differential) and a
//! formal family of higher-order pieces (derivation extensions of the
//! dualized higher brackets). Provides the order-by-order Maurer-Cartan
//! check and per-weight cohomology of the order-1 part.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::exactlin::{CochainComplex, Degree, GradedMap, Rat, SparseMat};
use crate::linfty::{check_jacobi, JacobiReport, LInftyStructure};
use crate::symalg::{dualize_bracket, FormalGradedMap, SymBasis};

/// The dual-generator symmetric algebra, truncated to weight
/// `window_weight + max_order`, with its differential split by formal order.
///
/// Identities are only asserted on monomials of weight <= `window_weight`:
/// order-n pieces raise weight by exactly n, so every composite appearing in
/// an order <= `max_order` identity stays inside the truncation there.
#[derive(Clone, Debug)]
pub struct CEAlgebra {
    /// Dual generator complex (degrees negated, labels kept).
    pub gens: CochainComplex,
    /// Monomial basis up to weight window_weight + max_order.
    pub basis: SymBasis,
    pub window_weight: usize,
    pub max_order: usize,
    /// Order-0 differential: derivation extension of the dual differential.
    pub delta0: GradedMap,
    /// Orders 1..max_order; order n extends the dualized arity-(n+1) bracket.
    pub delta: FormalGradedMap,
    /// Per order, domain monomials whose image left the truncation.
    pub overflow: BTreeMap<usize, BTreeSet<usize>>,
}

#[derive(Clone, Debug)]
pub enum CEError {
    JacobiFailed(JacobiReport),
    MCFailed(MCReport),
}

impl CEAlgebra {
    /// Order-n differential (0 = delta0).
    pub fn order(&self, n: usize) -> GradedMap {
        if n == 0 {
            self.delta0.clone()
        } else {
            self.delta.order(n)
        }
    }

    pub fn total_weight(&self) -> usize {
        self.window_weight + self.max_order
    }
}

/// Build the truncated Chevalley-Eilenberg algebra of a bracket structure.
/// Checks the homotopy Jacobi identities up to the highest arity the
/// truncation can see before dualizing.
pub fn build_ce(l: &LInftyStructure, w: usize, lmax: usize) -> Result<CEAlgebra, CEError> {
    // identities above arity 2*max_arity - 1 involve only absent brackets
    let arity_cap = core::cmp::min(2 * l.max_arity.max(1) - 1, lmax + 1).max(1);
    let jac = check_jacobi(l, arity_cap);
    if !jac.passed() {
        return Err(CEError::JacobiFailed(jac));
    }
    Ok(build_ce_unchecked(l, w, lmax))
}

/// Same construction without the Jacobi gate; negative controls use it so
/// the Maurer-Cartan check can exhibit the failure instead.
pub fn build_ce_unchecked(l: &LInftyStructure, w: usize, lmax: usize) -> CEAlgebra {
    let dual_space = l.complex.space.dual();
    let d_star = l.complex.differential.transpose_dual();
    let gens = CochainComplex::new(dual_space, d_star);
    let basis = SymBasis::new(&gens.space, w + lmax);
    let (delta0, ov0) = basis.extend_derivation(&basis.embed_gen_level(&gens.differential));
    debug_assert!(delta0.compose(&delta0).is_zero());
    let mut overflow = BTreeMap::new();
    overflow.insert(0, ov0);
    let mut delta = FormalGradedMap::zero(&basis.space, &basis.space, 1, lmax);
    for n in 1..=lmax {
        let Some(ln) = l.bracket(n + 1) else { continue };
        let field_sym = SymBasis::new(&l.complex.space, n + 1);
        let gen_level = dualize_bracket(ln, n + 1, &field_sym, &basis);
        let (dn, ovn) = basis.extend_derivation(&gen_level);
        overflow.insert(n, ovn);
        delta.set_order(n, dn);
    }
    CEAlgebra {
        gens,
        basis,
        window_weight: w,
        max_order: lmax,
        delta0,
        delta,
        overflow,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MCWitness {
    pub order: usize,
    /// Source monomial on which the identity fails.
    pub mono: String,
    /// Target monomial carrying a nonzero coefficient.
    pub value: String,
    pub coefficient: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MCOrderReport {
    pub order: usize,
    pub ok: bool,
    pub witness: Option<MCWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MCReport {
    pub window_weight: usize,
    /// Weights present in the truncation but outside the checked window.
    pub excluded_weights: Vec<usize>,
    pub orders: Vec<MCOrderReport>,
}

impl MCReport {
    pub fn passed(&self) -> bool {
        self.orders.iter().all(|o| o.ok)
    }
    pub fn first_failure(&self) -> Option<&MCOrderReport> {
        self.orders.iter().find(|o| !o.ok)
    }
}

/// Check the expanded Maurer-Cartan identity order by order: at order n,
/// delta0*dn + dn*delta0 + sum of dj*d(n-j) must vanish. Evaluated on
/// monomials of weight <= window_weight, where the truncation is exact;
/// heavier weights are excluded and listed.
pub fn mc_check(a: &CEAlgebra) -> MCReport {
    let mut orders = Vec::new();
    for n in 1..=a.max_order {
        let dn = a.delta.order(n);
        let mut m = a.delta0.compose(&dn).add(&dn.compose(&a.delta0));
        for j in 1..n {
            let dj = a.delta.order(j);
            let dk = a.delta.order(n - j);
            m = m.add(&dj.compose(&dk));
        }
        let mut witness = None;
        'outer: for g in 0..a.basis.len() {
            if a.basis.weight(g) > a.window_weight {
                continue;
            }
            let (deg, pos) = a.basis.position(g);
            let block = m.block(deg);
            for r in 0..block.rows {
                let v = block.get(r, pos);
                if !v.is_zero() {
                    let tg = a.basis.global_at(deg + 2, r);
                    witness = Some(MCWitness {
                        order: n,
                        mono: a.basis.label_of(g),
                        value: a.basis.label_of(tg),
                        coefficient: v,
                    });
                    break 'outer;
                }
            }
        }
        orders.push(MCOrderReport {
            order: n,
            ok: witness.is_none(),
            witness,
        });
    }
    MCReport {
        window_weight: a.window_weight,
        excluded_weights: ((a.window_weight + 1)..=a.total_weight()).collect(),
        orders,
    }
}

/// One weight row of the cohomology report at a fixed degree: dimensions of
/// the full monomial block, the kernel, the incoming image, and their
/// difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohRow {
    pub weight: usize,
    pub free_dim: usize,
    pub ker_dim: usize,
    pub im_dim: usize,
    pub coh_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub degree: Degree,
    /// Set when the differential has order-0 or order >= 2 parts in the
    /// inspected range: the per-weight numbers then describe the formal
    /// filtration only, not an exact cohomology.
    pub filtered_only: bool,
    pub rows: Vec<CohRow>,
}

/// Per-weight kernel/image dimensions of the differential at one degree.
///
/// The order-1 piece raises weight by 1 and the order-0 piece preserves it;
/// the kernel at weight w stacks both, the image collects the order-1 block
/// from (degree-1, w-1) and the order-0 block from (degree-1, w). When the
/// differential is concentrated in a single order the result is the exact
/// cohomology of that order; otherwise the report is flagged as filtered.
pub fn ce_cohomology(
    a: &CEAlgebra,
    degree: Degree,
    weight_max: usize,
) -> Result<CohomologyReport, CEError> {
    let mc = mc_check(a);
    if !mc.passed() {
        return Err(CEError::MCFailed(mc));
    }
    assert!(
        weight_max < a.total_weight(),
        "weight range must leave room for the order-1 image"
    );
    let d1 = a.delta.order(1);
    let higher = a.delta.nonzero_orders().any(|n| n >= 2);
    let mut filtered_only = higher;
    let mut rows = Vec::new();
    for w in 0..=weight_max {
        let b0 = a.basis.weight_block(&a.delta0, degree, w, w);
        let b1 = a.basis.weight_block(&d1, degree, w, w + 1);
        if !b0.is_zero() {
            filtered_only = true;
        }
        let free_dim = b1.cols;
        let ker_dim = free_dim - stack_rows(&b0, &b1).rank();
        let mut im_dim = 0;
        if w >= 1 {
            im_dim += a.basis.weight_block(&d1, degree - 1, w - 1, w).rank();
        }
        im_dim += a.basis.weight_block(&a.delta0, degree - 1, w, w).rank();
        rows.push(CohRow {
            weight: w,
            free_dim,
            ker_dim,
            im_dim,
            coh_dim: ker_dim - im_dim,
        });
    }
    Ok(CohomologyReport {
        degree,
        filtered_only,
        rows,
    })
}

fn stack_rows(a: &SparseMat, b: &SparseMat) -> SparseMat {
    assert_eq!(a.cols, b.cols);
    let mut out = SparseMat::zero(a.rows + b.rows, a.cols);
    for (r, c, v) in a.iter() {
        out.set(r, c, v.clone());
    }
    for (r, c, v) in b.iter() {
        out.set(a.rows + r, c, v.clone());
    }
    out
}
