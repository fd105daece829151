//! Homological perturbation on weight-truncated symmetric algebras: lifting
//! a generator-level retract to the symmetric algebra, perturbing the lifted
//! retract order by order, transferring the binary bracket along a retract,
//! and the resulting non-existence certificate for intertwiners.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::exactlin::{
    rat_int, CochainComplex, Degree, DeformationRetract, GradedMap, GradedVectorSpace, Rat,
    SparseMat,
};
use crate::linfty::{restrict_to_weight, LInftyStructure};
use crate::symalg::{add_term, Elt, FormalGradedMap, SymBasis};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HptError {
    /// Input retract identities (including side conditions) do not hold, or
    /// the induced basis change is singular.
    RetractInvariantsFailed,
    /// The perturbation has a nonzero order-0 part; the order-by-order
    /// series would not terminate.
    OrderZeroPerturbation,
    /// A perturbed retract identity failed on the sound window.
    PerturbedIdentityFailed { order: usize },
    /// The complex leaves the degree range the certificate argument needs.
    DegreeRangeViolated,
}

/// A deformation retract between weight-truncated symmetric algebras,
/// remembering the monomial bases of both sides.
#[derive(Clone, Debug)]
pub struct SymRetract {
    pub retract: DeformationRetract,
    pub big_basis: SymBasis,
    pub small_basis: SymBasis,
}

/// Lift a generator-level retract (with side conditions) to the symmetric
/// algebras truncated at weight `w`.
///
/// The construction splits the big space into an acyclic part (the image of
/// h and its differential image) plus an embedded copy of the small side,
/// extends h as a derivation in that adapted basis, and rescales each
/// monomial by the number of acyclic letters it contains. On monomials with
/// no acyclic letter the homotopy vanishes, which yields the side conditions
/// on the symmetric level as well. The multiplicative maps are the symmetric
/// powers of i and p. All identities are re-verified before returning.
pub fn sym_lift_retract(r: &DeformationRetract, w: usize) -> Result<SymRetract, HptError> {
    if !r.verify().all_ok() {
        return Err(HptError::RetractInvariantsFailed);
    }
    let big = &r.big.space;
    let small = &r.small.space;
    // per degree: basis of im h, its d-image one degree up, and the i-columns
    let mut c_cols: BTreeMap<Degree, Vec<Vec<Rat>>> = BTreeMap::new();
    for t1 in big.degrees() {
        let hb = r.h.block(t1);
        if hb.is_zero() {
            continue;
        }
        let rr = hb.rref();
        let cols: Vec<Vec<Rat>> = rr.pivots.iter().map(|&(_, c)| hb.column(c)).collect();
        if !cols.is_empty() {
            c_cols.insert(t1 - 1, cols);
        }
    }
    // adapted generator space: for each c-generator at degree t a paired
    // b-generator at degree t+1; r-generators carry the small labels
    let mut ad_comps: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
    // (degree, label) -> column in the big space's coordinates
    let mut t_cols: BTreeMap<(Degree, String), Vec<Rat>> = BTreeMap::new();
    // synthesized acyclic labels, to tell them apart from small labels
    let mut synth: alloc::collections::BTreeSet<(Degree, String)> =
        alloc::collections::BTreeSet::new();
    for t in big.degrees() {
        let mut labels = Vec::new();
        if let Some(cs) = c_cols.get(&(t - 1)) {
            for (j, cv) in cs.iter().enumerate() {
                let label = format!("b{}_{j}", t - 1);
                t_cols.insert((t, label.clone()), r.big.differential.block(t - 1).mul_vec(cv));
                synth.insert((t, label.clone()));
                labels.push(label);
            }
        }
        for (j, l) in small.labels(t).iter().enumerate() {
            let mut col = alloc::vec![Rat::zero(); big.dim(t)];
            let ib = r.i.block(t);
            for row in 0..ib.rows {
                col[row] = ib.get(row, j);
            }
            t_cols.insert((t, l.clone()), col);
            labels.push(l.clone());
        }
        if let Some(cs) = c_cols.get(&t) {
            for (j, cv) in cs.iter().enumerate() {
                let label = format!("c{t}_{j}");
                t_cols.insert((t, label.clone()), cv.clone());
                synth.insert((t, label.clone()));
                labels.push(label);
            }
        }
        if labels.len() != big.dim(t) {
            return Err(HptError::RetractInvariantsFailed);
        }
        if !labels.is_empty() {
            ad_comps.insert(t, labels);
        }
    }
    let ad_space = GradedVectorSpace::new(ad_comps);
    // invertible change of basis per degree, adapted -> big coordinates
    let mut t_mat: BTreeMap<Degree, SparseMat> = BTreeMap::new();
    let mut t_inv: BTreeMap<Degree, SparseMat> = BTreeMap::new();
    for t in big.degrees() {
        let labels = ad_space.labels(t);
        let mut m = SparseMat::zero(big.dim(t), labels.len());
        for (j, l) in labels.iter().enumerate() {
            for (row, v) in t_cols[&(t, l.clone())].iter().enumerate() {
                if !v.is_zero() {
                    m.set(row, j, v.clone());
                }
            }
        }
        let inv = m.inverse().ok_or(HptError::RetractInvariantsFailed)?;
        t_mat.insert(t, m);
        t_inv.insert(t, inv);
    }
    // adapted generator-level homotopy: h(b{t}_{j}) = -c{t}_{j}, zero on
    // everything else
    let mut h_ad = GradedMap::zero(&ad_space, &ad_space, -1);
    for (&t, cs) in &c_cols {
        for j in 0..cs.len() {
            let c_ix = ad_space.index_of(t, &format!("c{t}_{j}")).unwrap();
            let b_ix = ad_space.index_of(t + 1, &format!("b{t}_{j}")).unwrap();
            h_ad.add_to_block(t + 1, c_ix, b_ix, &-Rat::one());
        }
    }
    let ad_basis = SymBasis::new(&ad_space, w);
    let big_basis = SymBasis::new(big, w);
    let small_basis = SymBasis::new(small, w);
    let (h_deriv, _) = ad_basis.extend_derivation(&ad_basis.embed_gen_level(&h_ad));
    // rescale each column by the number of acyclic (b/c) letters
    let mut h_ad_sym = GradedMap::zero(&ad_basis.space, &ad_basis.space, -1);
    for g in 0..ad_basis.len() {
        let acyclic = ad_basis
            .mono(g)
            .iter()
            .filter(|&&x| synth.contains(&(ad_basis.gen_degree(x as usize), ad_basis.gen_label(x as usize).to_string())))
            .count();
        if acyclic == 0 {
            continue;
        }
        let (deg, pos) = ad_basis.position(g);
        let block = h_deriv.block(deg);
        let scale = rat_int(1) / rat_int(acyclic as i64);
        for row in 0..block.rows {
            let v = block.get(row, pos);
            if !v.is_zero() {
                h_ad_sym.add_to_block(deg, row, pos, &(v * &scale));
            }
        }
    }
    // multiplicative lifts of the basis change, i, and p
    let sym_t = {
        let images: Vec<Elt> = (0..ad_basis.num_gens())
            .map(|g| {
                let t = ad_basis.gen_degree(g);
                let col = &t_cols[&(t, ad_basis.gen_label(g).to_string())];
                let mut e: Elt = BTreeMap::new();
                for (row, v) in col.iter().enumerate() {
                    if !v.is_zero() {
                        let bg = big_basis
                            .gen_by_label(&big.labels(t)[row])
                            .expect("big generator");
                        add_term(&mut e, big_basis.lookup(&alloc::vec![bg as u32]).unwrap(), v.clone());
                    }
                }
                e
            })
            .collect();
        ad_basis.extend_multiplicative(&images, &big_basis).0
    };
    let sym_t_inv = {
        let images: Vec<Elt> = (0..big_basis.num_gens())
            .map(|g| {
                let t = big_basis.gen_degree(g);
                let k = big.index_of(t, big_basis.gen_label(g)).unwrap();
                let inv = &t_inv[&t];
                let mut e: Elt = BTreeMap::new();
                for row in 0..inv.rows {
                    let v = inv.get(row, k);
                    if !v.is_zero() {
                        let ag = ad_basis
                            .gen_by_label(&ad_space.labels(t)[row])
                            .expect("adapted generator");
                        add_term(&mut e, ad_basis.lookup(&alloc::vec![ag as u32]).unwrap(), v);
                    }
                }
                e
            })
            .collect();
        big_basis.extend_multiplicative(&images, &ad_basis).0
    };
    let sym_i = {
        let images: Vec<Elt> = (0..small_basis.num_gens())
            .map(|g| {
                let label = small_basis.gen_label(g);
                let ag = ad_basis.gen_by_label(label).expect("small label embedded");
                BTreeMap::from([(ad_basis.lookup(&alloc::vec![ag as u32]).unwrap(), Rat::one())])
            })
            .collect();
        small_basis.extend_multiplicative(&images, &ad_basis).0
    };
    let sym_p = {
        let images: Vec<Elt> = (0..ad_basis.num_gens())
            .map(|g| {
                let label = ad_basis.gen_label(g);
                match small_basis.gen_by_label(label) {
                    Some(sg) => BTreeMap::from([(
                        small_basis.lookup(&alloc::vec![sg as u32]).unwrap(),
                        Rat::one(),
                    )]),
                    None => BTreeMap::new(),
                }
            })
            .collect();
        ad_basis.extend_multiplicative(&images, &small_basis).0
    };
    let big_cx = CochainComplex::new(
        big_basis.space.clone(),
        big_basis
            .extend_derivation(&big_basis.embed_gen_level(&r.big.differential))
            .0,
    );
    let small_cx = CochainComplex::new(
        small_basis.space.clone(),
        small_basis
            .extend_derivation(&small_basis.embed_gen_level(&r.small.differential))
            .0,
    );
    let retract = DeformationRetract {
        big: big_cx,
        small: small_cx,
        i: sym_t.compose(&sym_i),
        p: sym_p.compose(&sym_t_inv),
        h: sym_t.compose(&h_ad_sym.compose(&sym_t_inv)),
        side_conditions: true,
    };
    if !retract.verify().all_ok() {
        return Err(HptError::RetractInvariantsFailed);
    }
    Ok(SymRetract {
        retract,
        big_basis,
        small_basis,
    })
}

/// Retract data perturbed by a formal differential: order-0 parts are the
/// unperturbed maps, higher orders come from the finite per-order expansion
/// of the perturbation series.
#[derive(Clone, Debug)]
pub struct PerturbedRetract {
    pub delta: FormalGradedMap,
    /// Differential on the small side; order 0 is the unperturbed one.
    pub tilde_delta: FormalGradedMap,
    pub tilde_i: FormalGradedMap,
    pub tilde_p: FormalGradedMap,
    pub tilde_h: FormalGradedMap,
}

/// Perturb a lifted retract by `delta` (no order-0 part) up to order `l`.
///
/// Per order n the series contributes compositions of at most n perturbation
/// factors separated by homotopies, so every output is a finite exact sum.
/// The perturbed retract identities are re-verified order by order on the
/// window where the truncation is exact (source weight + order within the
/// basis limit); `strict` additionally demands the perturbed side
/// conditions.
pub fn perturb(
    base: &SymRetract,
    delta: &FormalGradedMap,
    l: usize,
    strict: bool,
) -> Result<PerturbedRetract, HptError> {
    if delta.order_ref(0).is_some_and(|m| !m.is_zero()) {
        return Err(HptError::OrderZeroPerturbation);
    }
    let r = &base.retract;
    let big_sp = &r.big.space;
    let small_sp = &r.small.space;
    // a = delta + delta h a, order by order
    let mut a: Vec<GradedMap> = alloc::vec![GradedMap::zero(big_sp, big_sp, 1)];
    for n in 1..=l {
        let mut an = delta.order(n);
        for j in 1..n {
            let dj = delta.order(j);
            if dj.is_zero() || a[n - j].is_zero() {
                continue;
            }
            an = an.add(&dj.compose(&r.h.compose(&a[n - j])));
        }
        a.push(an);
    }
    let mut tilde_delta = FormalGradedMap::zero(small_sp, small_sp, 1, l);
    let mut tilde_i = FormalGradedMap::zero(small_sp, big_sp, 0, l);
    let mut tilde_p = FormalGradedMap::zero(big_sp, small_sp, 0, l);
    let mut tilde_h = FormalGradedMap::zero(big_sp, big_sp, -1, l);
    tilde_delta.set_order(0, r.small.differential.clone());
    tilde_i.set_order(0, r.i.clone());
    tilde_p.set_order(0, r.p.clone());
    tilde_h.set_order(0, r.h.clone());
    for n in 1..=l {
        if a[n].is_zero() {
            continue;
        }
        tilde_delta.set_order(n, r.p.compose(&a[n].compose(&r.i)));
        tilde_i.set_order(n, r.h.compose(&a[n].compose(&r.i)));
        tilde_p.set_order(n, r.p.compose(&a[n].compose(&r.h)));
        tilde_h.set_order(n, r.h.compose(&a[n].compose(&r.h)));
    }
    let out = PerturbedRetract {
        delta: delta.clone(),
        tilde_delta,
        tilde_i,
        tilde_p,
        tilde_h,
    };
    verify_perturbed(&out, base, l, strict)?;
    Ok(out)
}

/// Check the perturbed retract identities per order on the sound window.
pub fn verify_perturbed(
    pr: &PerturbedRetract,
    base: &SymRetract,
    l: usize,
    strict: bool,
) -> Result<(), HptError> {
    let r = &base.retract;
    let big_sp = &r.big.space;
    let small_sp = &r.small.space;
    // full perturbed big differential
    let mut big_d = pr.delta.clone();
    big_d.set_order(0, big_d.order(0).add(&r.big.differential));
    let id_small = FormalGradedMap::identity(small_sp, l);
    let id_big = FormalGradedMap::identity(big_sp, l);
    let checks: Vec<FormalGradedMap> = {
        let mut v = alloc::vec![
            pr.tilde_p.compose(&pr.tilde_i).sub(&id_small),
            big_d.compose(&pr.tilde_i).sub(&pr.tilde_i.compose(&pr.tilde_delta)),
            pr.tilde_delta.compose(&pr.tilde_p).sub(&pr.tilde_p.compose(&big_d)),
            big_d
                .compose(&pr.tilde_h)
                .add(&pr.tilde_h.compose(&big_d))
                .sub(&pr.tilde_i.compose(&pr.tilde_p))
                .add(&id_big),
            pr.tilde_delta.compose(&pr.tilde_delta),
        ];
        if strict {
            v.push(pr.tilde_h.compose(&pr.tilde_i));
            v.push(pr.tilde_p.compose(&pr.tilde_h));
            v.push(pr.tilde_h.compose(&pr.tilde_h));
        }
        v
    };
    let wmax = base.big_basis.max_weight;
    for m in &checks {
        let src_basis = if m.source == *small_sp {
            &base.small_basis
        } else {
            &base.big_basis
        };
        for n in 0..=l {
            let Some(block) = m.order_ref(n) else { continue };
            if block.is_zero() {
                continue;
            }
            for g in 0..src_basis.len() {
                if src_basis.weight(g) + n > wmax {
                    continue;
                }
                let (deg, pos) = src_basis.position(g);
                let b = block.block(deg);
                if b.column(pos).iter().any(|v| !v.is_zero()) {
                    return Err(HptError::PerturbedIdentityFailed { order: n });
                }
            }
        }
    }
    Ok(())
}

/// The transferred binary bracket along a retract with zero small
/// differential: p ∘ l2 ∘ Sym²(i), with a verdict on its block of pairs of
/// degree-(-1) classes.
#[derive(Clone, Debug)]
pub struct TransferredL2 {
    pub small_basis2: SymBasis,
    pub map: GradedMap,
    pub hminus1_nonzero: bool,
}

pub fn transfer_l2(r: &DeformationRetract, l2: &GradedMap) -> Result<TransferredL2, HptError> {
    if !r.small.differential.is_zero() || !r.verify().core_ok() {
        return Err(HptError::RetractInvariantsFailed);
    }
    let big2 = SymBasis::new(&r.big.space, 2);
    let small2 = SymBasis::new(&r.small.space, 2);
    let images: Vec<Elt> = (0..small2.num_gens())
        .map(|g| {
            let t = small2.gen_degree(g);
            let col = r.small.space.index_of(t, small2.gen_label(g)).unwrap();
            let ib = r.i.block(t);
            let mut e: Elt = BTreeMap::new();
            for row in 0..ib.rows {
                let v = ib.get(row, col);
                if !v.is_zero() {
                    let bg = big2.gen_by_label(&r.big.space.labels(t)[row]).unwrap();
                    add_term(&mut e, big2.lookup(&alloc::vec![bg as u32]).unwrap(), v);
                }
            }
            e
        })
        .collect();
    let sym_i = small2.extend_multiplicative(&images, &big2).0;
    let sym2_i = restrict_to_weight(&sym_i, &small2, &big2, 2);
    let map = r.p.compose(&l2.compose(&sym2_i));
    let hminus1_nonzero = !map.block(-2).is_zero();
    Ok(TransferredL2 {
        small_basis2: small2,
        map,
        hminus1_nonzero,
    })
}

/// Witness for the non-existence verdict: a pair of degree-(-1) cohomology
/// classes with a nonzero transferred bracket, and that value.
#[derive(Clone, Debug, PartialEq)]
pub struct NonexistenceWitness {
    pub left: String,
    pub right: String,
    /// Nonzero value in the degree-(-1) small basis.
    pub value: Vec<(String, Rat)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TransferVerdict {
    NonExistence(NonexistenceWitness),
    /// The transferred bracket vanishes on the inspected block; the
    /// criterion is one-directional, so nothing is concluded.
    Inconclusive,
}

/// Evaluate the transferred-bracket criterion: a nonzero transferred binary
/// bracket on pairs of degree-(-1) classes rules out an intertwiner. The
/// complex must be concentrated in degrees >= -1 for the identification of
/// that block.
pub fn nonexistence_certificate(
    l: &LInftyStructure,
    r: &DeformationRetract,
) -> Result<TransferVerdict, HptError> {
    if l.complex.space.min_degree().is_some_and(|d| d < -1) {
        return Err(HptError::DegreeRangeViolated);
    }
    assert_eq!(r.big.space, l.complex.space, "retract must sit on the given complex");
    let Some(l2) = l.bracket(2) else {
        return Ok(TransferVerdict::Inconclusive);
    };
    let t = transfer_l2(r, l2)?;
    let block = t.map.block(-2);
    if block.is_zero() {
        return Ok(TransferVerdict::Inconclusive);
    }
    let pairs: Vec<usize> = t
        .small_basis2
        .of_weight(2)
        .into_iter()
        .filter(|&g| t.small_basis2.degree_of(g) == -2)
        .collect();
    for (cix, &g) in pairs.iter().enumerate() {
        let col = block.column(cix);
        if col.iter().all(|v| v.is_zero()) {
            continue;
        }
        let m = t.small_basis2.mono(g);
        let value: Vec<(String, Rat)> = col
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(row, v)| (r.small.space.labels(-1)[row].clone(), v.clone()))
            .collect();
        return Ok(TransferVerdict::NonExistence(NonexistenceWitness {
            left: t.small_basis2.gen_label(m[0] as usize).to_string(),
            right: t.small_basis2.gen_label(m[1] as usize).to_string(),
            value,
        }));
    }
    Ok(TransferVerdict::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat_int, retract_to_cohomology};
    use crate::linfty::{shifted_lie_bracket, LieAlgebra};
    use alloc::vec;

    fn acyclic_pair() -> CochainComplex {
        let mut comps = BTreeMap::new();
        comps.insert(0, vec!["u".to_string()]);
        comps.insert(1, vec!["w".to_string()]);
        let sp = GradedVectorSpace::new(comps);
        let mut d = GradedMap::zero(&sp, &sp, 1);
        d.set_block(0, SparseMat::identity(1));
        CochainComplex::new(sp, d)
    }

    #[test]
    fn lift_of_identity_retract() {
        let cx = acyclic_pair();
        let r = DeformationRetract::identity(&cx);
        let lifted = sym_lift_retract(&r, 3).unwrap();
        assert!(lifted.retract.verify().all_ok());
        assert!(lifted.retract.h.is_zero());
        assert_eq!(
            lifted.big_basis.space.total_dim(),
            lifted.small_basis.space.total_dim()
        );
    }

    #[test]
    fn lift_of_acyclic_pair_has_unit_small_side() {
        let cx = acyclic_pair();
        let r = retract_to_cohomology(&cx);
        assert!(r.verify().all_ok());
        let lifted = sym_lift_retract(&r, 3).unwrap();
        // small side is the unit monomial only
        assert_eq!(lifted.small_basis.space.total_dim(), 1);
        // monomials u^a w^b, b <= 1, weight 1..3, plus the unit
        assert_eq!(lifted.big_basis.space.total_dim(), 7);
        assert!(lifted.retract.verify().all_ok());
    }

    #[test]
    fn lift_with_nontrivial_cohomology() {
        let mut comps = BTreeMap::new();
        comps.insert(0, vec!["u".to_string(), "x".to_string()]);
        comps.insert(1, vec!["w".to_string()]);
        let sp = GradedVectorSpace::new(comps);
        let mut d = GradedMap::zero(&sp, &sp, 1);
        d.set_block(0, SparseMat::from_entries(1, 2, &[(0, 0, rat_int(1))]));
        let cx = CochainComplex::new(sp, d);
        let r = retract_to_cohomology(&cx);
        assert!(r.verify().all_ok());
        let lifted = sym_lift_retract(&r, 4).unwrap();
        assert!(lifted.retract.verify().all_ok());
        // small side is polynomials in the surviving class
        assert_eq!(lifted.small_basis.space.total_dim(), 5);
    }

    #[test]
    fn perturb_by_zero_is_identity_on_data() {
        let cx = acyclic_pair();
        let r = retract_to_cohomology(&cx);
        let lifted = sym_lift_retract(&r, 3).unwrap();
        let delta = FormalGradedMap::zero(&lifted.retract.big.space, &lifted.retract.big.space, 1, 2);
        let pr = perturb(&lifted, &delta, 2, true).unwrap();
        assert!(pr.tilde_delta.order(1).is_zero());
        assert!(pr.tilde_delta.order(2).is_zero());
        assert_eq!(pr.tilde_i.order(0), lifted.retract.i);
        assert!(pr.tilde_i.order(1).is_zero());
    }

    #[test]
    fn perturbation_series_on_mixed_complex() {
        // u -> w acyclic, x a surviving even class; perturb by the
        // derivation x -> x*w, whose transferred differential vanishes
        // because every image carries a w letter
        let mut comps = BTreeMap::new();
        comps.insert(0, vec!["u".to_string(), "x".to_string()]);
        comps.insert(1, vec!["w".to_string()]);
        let sp = GradedVectorSpace::new(comps);
        let mut d = GradedMap::zero(&sp, &sp, 1);
        d.set_block(0, SparseMat::from_entries(1, 2, &[(0, 0, rat_int(1))]));
        let cx = CochainComplex::new(sp, d);
        let r = retract_to_cohomology(&cx);
        let lifted = sym_lift_retract(&r, 4).unwrap();
        let basis = &lifted.big_basis;
        let mut gen_level = GradedMap::zero(&basis.gen_space(), &basis.space, 1);
        let x = basis.gen_by_label("x").unwrap();
        let w = basis.gen_by_label("w").unwrap();
        let xw = basis.lookup(&vec![x as u32, w as u32]).unwrap();
        let (tdeg, tpos) = basis.position(xw);
        assert_eq!(tdeg, 1);
        let xcol = basis.gen_space().index_of(0, "x").unwrap();
        gen_level.add_to_block(0, tpos, xcol, &Rat::one());
        let (d1, _) = basis.extend_derivation(&gen_level);
        let mut delta = FormalGradedMap::zero(&basis.space, &basis.space, 1, 3);
        delta.set_order(1, d1);
        let pr = perturb(&lifted, &delta, 3, true).unwrap();
        for n in 1..=3 {
            assert!(pr.tilde_delta.order(n).is_zero(), "order {n}");
        }
        assert!(!pr.tilde_i.order(1).is_zero());
    }

    #[test]
    fn order_zero_perturbation_rejected() {
        let cx = acyclic_pair();
        let r = retract_to_cohomology(&cx);
        let lifted = sym_lift_retract(&r, 2).unwrap();
        let mut delta =
            FormalGradedMap::zero(&lifted.retract.big.space, &lifted.retract.big.space, 1, 1);
        delta.set_order(
            0,
            lifted.retract.big.differential.clone(),
        );
        assert_eq!(
            perturb(&lifted, &delta, 1, true).unwrap_err(),
            HptError::OrderZeroPerturbation
        );
    }

    fn minimal_shifted(g: &LieAlgebra) -> LInftyStructure {
        let mut comps = BTreeMap::new();
        comps.insert(
            -1,
            g.labels.iter().map(|l| format!("c_{l}")).collect::<Vec<_>>(),
        );
        comps.insert(
            0,
            g.labels.iter().map(|l| format!("A_{l}")).collect::<Vec<_>>(),
        );
        let cx = CochainComplex::with_zero_differential(GradedVectorSpace::new(comps));
        let l2 = shifted_lie_bracket(g, &cx);
        LInftyStructure::strict_dgla(cx, l2)
    }

    #[test]
    fn transfer_through_identity_returns_bracket() {
        let l = minimal_shifted(&LieAlgebra::sl2());
        let r = DeformationRetract::identity(&l.complex);
        let t = transfer_l2(&r, l.bracket(2).unwrap()).unwrap();
        assert_eq!(&t.map, l.bracket(2).unwrap());
        assert!(t.hminus1_nonzero);
    }

    #[test]
    fn certificate_on_sl2_and_abelian() {
        let l = minimal_shifted(&LieAlgebra::sl2());
        let r = DeformationRetract::identity(&l.complex);
        match nonexistence_certificate(&l, &r).unwrap() {
            TransferVerdict::NonExistence(wit) => {
                // first nonzero pair in canonical order: c_e * c_f with
                // value -[e,f] = -h
                assert_eq!((wit.left.as_str(), wit.right.as_str()), ("c_e", "c_f"));
                assert_eq!(wit.value, vec![("c_h".to_string(), rat_int(-1))]);
            }
            v => panic!("expected non-existence, got {v:?}"),
        }
        let ab = minimal_shifted(&LieAlgebra::abelian(3));
        let r = DeformationRetract::identity(&ab.complex);
        assert_eq!(
            nonexistence_certificate(&ab, &r).unwrap(),
            TransferVerdict::Inconclusive
        );
    }

    #[test]
    fn degree_range_guard() {
        let mut comps = BTreeMap::new();
        comps.insert(-2, vec!["z".to_string()]);
        comps.insert(0, vec!["y".to_string()]);
        let cx = CochainComplex::with_zero_differential(GradedVectorSpace::new(comps));
        let l = LInftyStructure {
            complex: cx.clone(),
            brackets: BTreeMap::new(),
            max_arity: 1,
        };
        let r = DeformationRetract::identity(&cx);
        assert_eq!(
            nonexistence_certificate(&l, &r).unwrap_err(),
            HptError::DegreeRangeViolated
        );
    }
}
