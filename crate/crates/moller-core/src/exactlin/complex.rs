//! Cochain complexes, cohomology with deterministic representatives, linear
//! solving on graded maps, and deformation retracts onto cohomology.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::graded::{Degree, GradedMap, GradedVectorSpace};
use super::matrix::{Rat, SolveCertificate, SparseMat};

/// A graded space with a square-zero degree +1 differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    pub space: GradedVectorSpace,
    pub differential: GradedMap,
}

impl CochainComplex {
    pub fn new(space: GradedVectorSpace, differential: GradedMap) -> Self {
        assert_eq!(differential.shift, 1, "differential must have degree +1");
        assert_eq!(differential.source, space);
        assert_eq!(differential.target, space);
        CochainComplex {
            space,
            differential,
        }
    }

    /// Complex with zero differential.
    pub fn with_zero_differential(space: GradedVectorSpace) -> Self {
        let d = GradedMap::zero(&space, &space, 1);
        CochainComplex {
            space,
            differential: d,
        }
    }

    /// d ∘ d = 0, block by block.
    pub fn verify(&self) -> bool {
        self.differential.compose(&self.differential).is_zero()
    }

    /// Cohomology at one degree: dimension plus chosen representative vectors.
    ///
    /// Representatives are the kernel-basis vectors that remain independent
    /// after the image basis, under the fixed pivot rule, so the choice is
    /// deterministic.
    pub fn cohomology(&self, deg: Degree) -> (usize, Vec<Vec<Rat>>) {
        let d_out = self.differential.block(deg);
        let d_in = self.differential.block(deg - 1);
        let ker = d_out.kernel_basis();
        let im_rank = d_in.rank();
        let n = self.space.dim(deg);
        // stack image columns then kernel columns; representatives are the
        // kernel columns that become pivots
        let im_cols: Vec<Vec<Rat>> = d_in
            .rref()
            .pivots
            .iter()
            .map(|&(_, c)| d_in.column(c))
            .collect();
        let mut all = im_cols.clone();
        all.extend(ker.iter().cloned());
        let stacked = SparseMat::from_columns(n, &all);
        let pivots = stacked.rref().pivots;
        let reps: Vec<Vec<Rat>> = pivots
            .iter()
            .filter(|&&(_, c)| c >= im_cols.len())
            .map(|&(_, c)| all[c].clone())
            .collect();
        debug_assert_eq!(reps.len(), ker.len() - im_rank);
        (reps.len(), reps)
    }

    /// The dual complex: dual space, transposed differential.
    pub fn dual(&self) -> CochainComplex {
        // d: V^k -> V^{k+1} dualizes to (V^{k+1})* -> (V^k)*, which in the
        // negated grading is again a degree +1 map.
        CochainComplex::new(self.space.dual(), self.differential.transpose_dual())
    }
}

/// Solve A ∘ X = B for a graded map X, degree block by degree block.
/// On failure returns a functional annihilating im A but not B.
pub fn solve_linear(a: &GradedMap, b: &GradedMap) -> Result<GradedMap, LinearCertificate> {
    if a.target != b.target {
        return Err(LinearCertificate::ShapeMismatch);
    }
    let xshift = b.shift - a.shift;
    let mut x = GradedMap::zero(&b.source, &a.source, xshift);
    for deg in b.source.degrees().collect::<Vec<_>>() {
        let bb = b.block(deg);
        if bb.is_zero() {
            continue;
        }
        let ab = a.block(deg + xshift);
        if ab.rows != bb.rows {
            return Err(LinearCertificate::ShapeMismatch);
        }
        match ab.solve(&bb) {
            Ok(sol) => x.set_block(deg, sol),
            Err(cert) => {
                return Err(LinearCertificate::Inconsistent {
                    degree: deg,
                    certificate: cert,
                })
            }
        }
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq)]
pub enum LinearCertificate {
    ShapeMismatch,
    /// `certificate.functional` pairs to zero with every column of A's block at
    /// degree `degree + (b.shift - a.shift)` and nontrivially with column
    /// `certificate.col` of B's block at `degree`.
    Inconsistent {
        degree: Degree,
        certificate: SolveCertificate,
    },
}

/// (i, p, h) contracting `big` onto `small`: p i = id, d h + h d = i p - id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationRetract {
    pub big: CochainComplex,
    pub small: CochainComplex,
    pub i: GradedMap,
    pub p: GradedMap,
    pub h: GradedMap,
    /// Whether h i = 0, p h = 0 and h h = 0 all hold.
    pub side_conditions: bool,
}

impl DeformationRetract {
    pub fn identity(c: &CochainComplex) -> Self {
        DeformationRetract {
            big: c.clone(),
            small: c.clone(),
            i: GradedMap::identity(&c.space),
            p: GradedMap::identity(&c.space),
            h: GradedMap::zero(&c.space, &c.space, -1),
            side_conditions: true,
        }
    }

    /// d h + h d as a degree-0 map on big.
    pub fn boundary_of_h(&self) -> GradedMap {
        let d = &self.big.differential;
        d.compose(&self.h).add(&self.h.compose(d))
    }

    /// Check every defining identity; side conditions are reported, not
    /// required.
    pub fn verify(&self) -> RetractCheck {
        let id_small = GradedMap::identity(&self.small.space);
        let id_big = GradedMap::identity(&self.big.space);
        let pi = self.p.compose(&self.i).sub(&id_small).is_zero();
        let i_chain = self
            .big
            .differential
            .compose(&self.i)
            .sub(&self.i.compose(&self.small.differential))
            .is_zero();
        let p_chain = self
            .small
            .differential
            .compose(&self.p)
            .sub(&self.p.compose(&self.big.differential))
            .is_zero();
        let homotopy = self
            .boundary_of_h()
            .sub(&self.i.compose(&self.p).sub(&id_big))
            .is_zero();
        let hi = self.h.compose(&self.i).is_zero();
        let ph = self.p.compose(&self.h).is_zero();
        let hh = self.h.compose(&self.h).is_zero();
        RetractCheck {
            pi,
            i_chain,
            p_chain,
            homotopy,
            hi,
            ph,
            hh,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RetractCheck {
    pub pi: bool,
    pub i_chain: bool,
    pub p_chain: bool,
    pub homotopy: bool,
    pub hi: bool,
    pub ph: bool,
    pub hh: bool,
}

impl RetractCheck {
    pub fn core_ok(&self) -> bool {
        self.pi && self.i_chain && self.p_chain && self.homotopy
    }
    pub fn all_ok(&self) -> bool {
        self.core_ok() && self.hi && self.ph && self.hh
    }
}

/// Deterministic retract of a complex onto its cohomology (zero differential
/// on the small side), with all side conditions enforced.
///
/// Per degree the space splits as B ⊕ R ⊕ C with B = im d, R the chosen
/// cocycle representatives and C a complement of the kernel spanned by the
/// pivot coordinates of d; h inverts d: C -> B with a minus sign and vanishes
/// on R ⊕ C.
pub fn retract_to_cohomology(c: &CochainComplex) -> DeformationRetract {
    assert!(c.verify(), "retract_to_cohomology needs d^2 = 0");
    let degrees: Vec<Degree> = c.space.degrees().collect();

    struct DegData {
        b_cols: Vec<Vec<Rat>>,
        // for each B column, the pivot coordinate in the previous degree it is
        // the image of
        b_preimage: Vec<usize>,
        reps: Vec<Vec<Rat>>,
        inv: SparseMat, // inverse of [B | R | C]
    }

    let mut data: BTreeMap<Degree, DegData> = BTreeMap::new();
    let mut small_comps: BTreeMap<Degree, Vec<String>> = BTreeMap::new();

    for &deg in &degrees {
        let n = c.space.dim(deg);
        let d_out = c.differential.block(deg);
        let d_in = c.differential.block(deg - 1);
        let in_pivots: Vec<usize> = d_in.rref().pivots.iter().map(|&(_, col)| col).collect();
        let b_cols: Vec<Vec<Rat>> = in_pivots.iter().map(|&col| d_in.column(col)).collect();
        let (_, reps) = c.cohomology(deg);
        let c_coords: Vec<usize> = d_out.rref().pivots.iter().map(|&(_, col)| col).collect();
        let mut cols = b_cols.clone();
        cols.extend(reps.iter().cloned());
        for &j in &c_coords {
            let mut e = alloc::vec![Rat::zero(); n];
            e[j] = Rat::one();
            cols.push(e);
        }
        assert_eq!(cols.len(), n, "B + R + C must exhaust the degree");
        let t = SparseMat::from_columns(n, &cols);
        let inv = t.inverse().expect("B, R, C are independent");
        // reuse the big label when a representative is a standard basis vector
        let labels = c.space.labels(deg);
        let mut small_labels = Vec::new();
        for (j, r) in reps.iter().enumerate() {
            let unit = r
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect::<Vec<_>>();
            let name = match unit.as_slice() {
                [(k, v)] if **v == Rat::one() => labels[*k].clone(),
                _ => format!("[{}:{}]", deg, j),
            };
            small_labels.push(name);
        }
        if !small_labels.is_empty() {
            small_comps.insert(deg, small_labels);
        }
        data.insert(
            deg,
            DegData {
                b_cols,
                b_preimage: in_pivots,
                reps,
                inv,
            },
        );
    }

    let small_space = GradedVectorSpace::new(small_comps);
    let small = CochainComplex::with_zero_differential(small_space.clone());
    let mut i = GradedMap::zero(&small_space, &c.space, 0);
    let mut p = GradedMap::zero(&c.space, &small_space, 0);
    let mut h = GradedMap::zero(&c.space, &c.space, -1);

    for &deg in &degrees {
        let dd = &data[&deg];
        let n = c.space.dim(deg);
        if !dd.reps.is_empty() {
            i.set_block(deg, SparseMat::from_columns(n, &dd.reps));
            // p = R-rows of the inverse basis matrix
            let mut pm = SparseMat::zero(dd.reps.len(), n);
            for (r, _) in dd.reps.iter().enumerate() {
                for cix in 0..n {
                    pm.set(r, cix, dd.inv.get(dd.b_cols.len() + r, cix));
                }
            }
            p.set_block(deg, pm);
        }
        // h at degree deg: send the B coordinates to minus their chosen
        // preimage coordinate in degree deg - 1
        if !dd.b_cols.is_empty() {
            let prev_n = c.space.dim(deg - 1);
            let mut hm = SparseMat::zero(prev_n, n);
            for (bj, &pre) in dd.b_preimage.iter().enumerate() {
                for cix in 0..n {
                    let coef = dd.inv.get(bj, cix);
                    if !coef.is_zero() {
                        hm.add_to(pre, cix, &(-coef));
                    }
                }
            }
            h.set_block(deg, hm);
        }
    }

    let r = DeformationRetract {
        big: c.clone(),
        small,
        i,
        p,
        h,
        side_conditions: true,
    };
    debug_assert!(r.verify().all_ok());
    r
}

/// Compose an inner retract small ⇆ mid with an outer retract mid ⇆ big:
/// (i₂ i₁, p₁ p₂, h₂ + i₂ h₁ p₂). Identities are re-verified; h² may fail and
/// is only recorded in the side-condition flag.
pub fn compose_retracts(
    outer: &DeformationRetract,
    inner: &DeformationRetract,
) -> Result<DeformationRetract, RetractError> {
    if inner.big != outer.small {
        return Err(RetractError::IncompatibleRetracts);
    }
    let i = outer.i.compose(&inner.i);
    let p = inner.p.compose(&outer.p);
    let h = outer
        .h
        .add(&outer.i.compose(&inner.h).compose(&outer.p));
    let mut r = DeformationRetract {
        big: outer.big.clone(),
        small: inner.small.clone(),
        i,
        p,
        h,
        side_conditions: false,
    };
    let check = r.verify();
    if !check.core_ok() {
        return Err(RetractError::RetractInvariantsFailed);
    }
    r.side_conditions = check.hi && check.ph && check.hh;
    Ok(r)
}

/// Rebuild the homotopy of a retract whose (i, p) are valid but whose h lost
/// the side conditions. Requires the small differential to vanish.
pub fn renormalize_retract(r: &DeformationRetract) -> Result<DeformationRetract, RetractError> {
    if !r.small.differential.is_zero() {
        return Err(RetractError::SmallDifferentialNonzero);
    }
    if !r.verify().core_ok() {
        return Err(RetractError::RetractInvariantsFailed);
    }
    let c = &r.big;
    let mut h = GradedMap::zero(&c.space, &c.space, -1);
    for deg in c.space.degrees().collect::<Vec<_>>() {
        // choose C in degree deg-1: kernel vectors of p independent from ker d
        let prev = deg - 1;
        let n_prev = c.space.dim(prev);
        if n_prev == 0 {
            continue;
        }
        let d_in = c.differential.block(prev);
        let ker_d = d_in.kernel_basis();
        let ker_p = r.p.block(prev).kernel_basis();
        let mut cols = ker_d.clone();
        cols.extend(ker_p.iter().cloned());
        let stacked = SparseMat::from_columns(n_prev, &cols);
        let c_basis: Vec<Vec<Rat>> = stacked
            .rref()
            .pivots
            .iter()
            .filter(|&&(_, col)| col >= ker_d.len())
            .map(|&(_, col)| cols[col].clone())
            .collect();
        if c_basis.is_empty() {
            continue;
        }
        // d maps the chosen C isomorphically onto B = im d in degree deg;
        // h sends d(c_j) back to -c_j, and kills i(small) and the C of this
        // degree. Solve on the basis [dC | i | C_deg] of this degree.
        let n = c.space.dim(deg);
        let dc: Vec<Vec<Rat>> = c_basis.iter().map(|v| d_in.mul_vec(v)).collect();
        let i_cols: Vec<Vec<Rat>> = (0..r.small.space.dim(deg))
            .map(|j| r.i.block(deg).column(j))
            .collect();
        // C of this degree, built the same way one degree up
        let d_out = c.differential.block(deg);
        let ker_d_deg = d_out.kernel_basis();
        let ker_p_deg = r.p.block(deg).kernel_basis();
        let mut cols_deg = ker_d_deg.clone();
        cols_deg.extend(ker_p_deg.iter().cloned());
        let stacked_deg = SparseMat::from_columns(n, &cols_deg);
        let c_deg: Vec<Vec<Rat>> = stacked_deg
            .rref()
            .pivots
            .iter()
            .filter(|&&(_, col)| col >= ker_d_deg.len())
            .map(|&(_, col)| cols_deg[col].clone())
            .collect();
        let mut basis = dc.clone();
        basis.extend(i_cols);
        basis.extend(c_deg);
        assert_eq!(basis.len(), n, "dC + i(small) + C must exhaust the degree");
        let t = SparseMat::from_columns(n, &basis);
        let inv = t.inverse().expect("independent basis");
        let mut hm = SparseMat::zero(n_prev, n);
        for (bj, cvec) in c_basis.iter().enumerate() {
            for cix in 0..n {
                let coef = inv.get(bj, cix);
                if coef.is_zero() {
                    continue;
                }
                for (rix, v) in cvec.iter().enumerate() {
                    if !v.is_zero() {
                        hm.add_to(rix, cix, &-(v * &coef));
                    }
                }
            }
        }
        if !hm.is_zero() {
            h.set_block(deg, hm);
        }
    }
    let out = DeformationRetract {
        big: r.big.clone(),
        small: r.small.clone(),
        i: r.i.clone(),
        p: r.p.clone(),
        h,
        side_conditions: true,
    };
    let check = out.verify();
    if !check.all_ok() {
        return Err(RetractError::RetractInvariantsFailed);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RetractError {
    IncompatibleRetracts,
    RetractInvariantsFailed,
    SmallDifferentialNonzero,
}
