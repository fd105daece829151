//! Intertwiner candidates between the free and interacting differentials on
//! the symmetric truncation: verification of the defining equation, the
//! closed-form construction from a splitting of the dual differential, and
//! the order-by-order obstruction tower with machine-checkable certificates
//! on the obstructed side.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::ce::{mc_check, CEAlgebra, MCReport};
use crate::exactlin::{retract_to_cohomology, Degree, GradedMap, Rat};
use crate::hpt::{sym_lift_retract, SymRetract};
use crate::symalg::{Elt, FormalGradedMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MollerMode {
    GeneralLinear,
    AlgebraMorphism,
}

/// A formal family K with K at order 0 the identity, meant to intertwine
/// delta0 with delta0 + delta: (delta0 + delta) K = K delta0.
#[derive(Clone, Debug)]
pub struct MollerCandidate {
    pub mode: MollerMode,
    pub k: FormalGradedMap,
    /// In algebra mode, the generator images per order that K extends.
    pub gen_images: Option<Vec<Vec<Elt>>>,
}

#[derive(Clone, Debug)]
pub enum MollerError {
    /// The construction from a splitting needs dual generators concentrated
    /// in degrees -1 and 0.
    NotTwoTerm,
    /// s restricted to the image of the dual differential is not a left
    /// inverse of it.
    SplittingInvalid,
    MCFailed(MCReport),
    /// The cohomology retract of the generator complex could not be lifted.
    RetractUnavailable,
}

impl MollerCandidate {
    pub fn identity(a: &CEAlgebra, max_order: usize) -> Self {
        MollerCandidate {
            mode: MollerMode::GeneralLinear,
            k: FormalGradedMap::identity(&a.basis.space, max_order),
            gen_images: None,
        }
    }

    /// Extend per-order generator images multiplicatively. `gen_images[g][n]`
    /// is the order-n part of the image of generator g; order 0 must be the
    /// generator itself.
    pub fn from_generator_images(
        a: &CEAlgebra,
        gen_images: Vec<Vec<Elt>>,
        max_order: usize,
    ) -> Self {
        for (g, imgs) in gen_images.iter().enumerate() {
            let expected = a.basis.gen_elt(g);
            assert_eq!(imgs.first(), Some(&expected), "order-0 image must be the generator");
        }
        let (orders, _overflow) =
            a.basis
                .extend_multiplicative_formal(&gen_images, max_order, &a.basis);
        let mut k = FormalGradedMap::zero(&a.basis.space, &a.basis.space, 0, max_order);
        for (n, m) in orders.into_iter().enumerate() {
            k.set_order(n, m);
        }
        MollerCandidate {
            mode: MollerMode::AlgebraMorphism,
            k,
            gen_images: Some(gen_images),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MollerWitness {
    pub order: usize,
    pub mono: String,
    pub value: String,
    pub coefficient: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MollerOrderReport {
    pub order: usize,
    pub ok: bool,
    pub witness: Option<MollerWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MollerReport {
    pub window_weight: usize,
    pub orders: Vec<MollerOrderReport>,
}

impl MollerReport {
    pub fn passed(&self) -> bool {
        self.orders.iter().all(|o| o.ok)
    }
    pub fn first_failure(&self) -> Option<&MollerOrderReport> {
        self.orders.iter().find(|o| !o.ok)
    }
}

/// Expand (delta0 + delta) K - K delta0 per order and check it vanishes on
/// the weight window. Each order-j piece of delta raises weight by exactly
/// j, so on source monomials of weight <= window the truncation is exact.
pub fn verify_moller(a: &CEAlgebra, cand: &MollerCandidate) -> MollerReport {
    let lmax = core::cmp::min(cand.k.max_order, a.max_order);
    let mut orders = Vec::new();
    for n in 0..=lmax {
        let kn = cand.k.order(n);
        let mut e = a.delta0.compose(&kn).sub(&kn.compose(&a.delta0));
        for j in 1..=n {
            let dj = a.delta.order(j);
            if dj.is_zero() {
                continue;
            }
            let km = cand.k.order(n - j);
            if km.is_zero() {
                continue;
            }
            e = e.add(&dj.compose(&km));
        }
        let mut witness = None;
        'outer: for g in 0..a.basis.len() {
            if a.basis.weight(g) > a.window_weight {
                continue;
            }
            let (deg, pos) = a.basis.position(g);
            let block = e.block(deg);
            for r in 0..block.rows {
                let v = block.get(r, pos);
                if !v.is_zero() {
                    witness = Some(MollerWitness {
                        order: n,
                        mono: a.basis.label_of(g),
                        value: a.basis.label_of(a.basis.global_at(deg + 1, r)),
                        coefficient: v,
                    });
                    break 'outer;
                }
            }
        }
        orders.push(MollerOrderReport {
            order: n,
            ok: witness.is_none(),
            witness,
        });
    }
    MollerReport {
        window_weight: a.window_weight,
        orders,
    }
}

/// The closed-form intertwiner from a splitting: for dual generators
/// concentrated in degrees {-1, 0} and s with s delta0 = id on the
/// degree-(-1) generators, K fixes the degree-(-1) generators, sends a
/// degree-0 generator x to x + delta(s(x)), and extends multiplicatively.
pub fn moller_from_splitting(
    a: &CEAlgebra,
    s: &GradedMap,
) -> Result<MollerCandidate, MollerError> {
    let degs: Vec<Degree> = a.gens.space.degrees().collect();
    if !degs.iter().all(|d| *d == -1 || *d == 0) {
        return Err(MollerError::NotTwoTerm);
    }
    // s delta0 = id on the degree-(-1) generators
    let d_block = a.gens.differential.block(-1);
    let s_block = s.block(0);
    let n_minus = a.gens.space.dim(-1);
    let composed = s_block.mul(&d_block);
    if composed != crate::exactlin::SparseMat::identity(n_minus) {
        return Err(MollerError::SplittingInvalid);
    }
    let lmax = a.max_order;
    let mut gen_images: Vec<Vec<Elt>> = Vec::new();
    for g in 0..a.basis.num_gens() {
        let mut imgs = alloc::vec![a.basis.gen_elt(g)];
        if a.basis.gen_degree(g) == 0 {
            // s(x) as a weight-1 element, then its delta images per order
            let col = a
                .gens
                .space
                .index_of(0, a.basis.gen_label(g))
                .expect("generator");
            let mut sx: Elt = BTreeMap::new();
            for r in 0..s_block.rows {
                let v = s_block.get(r, col);
                if !v.is_zero() {
                    let label = &a.gens.space.labels(-1)[r];
                    let tg = a.basis.gen_by_label(label).unwrap();
                    crate::symalg::add_term(&mut sx, a.basis.lookup(&alloc::vec![tg as u32]).unwrap(), v);
                }
            }
            for n in 1..=lmax {
                let dn = a.delta.order(n);
                let mut img: Elt = BTreeMap::new();
                for (src, c) in &sx {
                    let (sdeg, spos) = a.basis.position(*src);
                    let block = dn.block(sdeg);
                    for r in 0..block.rows {
                        let v = block.get(r, spos);
                        if !v.is_zero() {
                            crate::symalg::add_term(
                                &mut img,
                                a.basis.global_at(sdeg + 1, r),
                                v * c,
                            );
                        }
                    }
                }
                imgs.push(img);
            }
        } else {
            for _ in 1..=lmax {
                imgs.push(BTreeMap::new());
            }
        }
        gen_images.push(imgs);
    }
    Ok(MollerCandidate::from_generator_images(a, gen_images, lmax))
}

/// Left inverse of the dual differential on the degree-(-1) generators, if
/// one exists (the differential must be injective there).
pub fn splitting_from_differential(a: &CEAlgebra) -> Option<GradedMap> {
    let d_block = a.gens.differential.block(-1);
    let n_minus = a.gens.space.dim(-1);
    if n_minus == 0 {
        return Some(GradedMap::zero(&a.gens.space, &a.gens.space, -1));
    }
    // solve d^T s^T = id
    let st = d_block
        .transpose()
        .solve(&crate::exactlin::SparseMat::identity(n_minus))
        .ok()?;
    let mut s = GradedMap::zero(&a.gens.space, &a.gens.space, -1);
    s.set_block(0, st.transpose());
    Some(s)
}

/// Certificate that one tower order is unsolvable: a functional built from a
/// projection row and an inclusion column. It annihilates every commutator
/// with delta0 but pairs nontrivially with the right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionCertificate {
    pub order: usize,
    /// Small-side monomials locating the obstruction entry.
    pub source: String,
    pub target: String,
    pub source_degree: Degree,
    pub source_weight: usize,
    /// Row functional on the big degree source_degree + 1 component.
    pub functional: Vec<Rat>,
    /// Column vector in the big degree source_degree component.
    pub vector: Vec<Rat>,
    pub value: Rat,
}

impl ObstructionCertificate {
    /// Independent re-check: functional annihilates the image of delta0,
    /// delta0 kills the vector, and the pairing with the right-hand side is
    /// the recorded nonzero value.
    pub fn check(&self, delta0: &GradedMap, rhs: &GradedMap) -> bool {
        if self.value.is_zero() {
            return false;
        }
        let deg = self.source_degree;
        // functional * delta0 = 0 on the block entering degree deg + 1
        let din = delta0.block(deg);
        let mut fd_ok = true;
        for c in 0..din.cols {
            let mut acc = Rat::zero();
            for r in 0..din.rows {
                acc += &self.functional[r] * din.get(r, c);
            }
            if !acc.is_zero() {
                fd_ok = false;
                break;
            }
        }
        let dv = delta0.block(deg).mul_vec(&self.vector);
        let v_ok = dv.iter().all(|x| x.is_zero());
        let rv = rhs.block(deg).mul_vec(&self.vector);
        let mut pairing = Rat::zero();
        for (r, x) in rv.iter().enumerate() {
            pairing += &self.functional[r] * x;
        }
        fd_ok && v_ok && pairing == self.value
    }
}

#[derive(Clone, Debug)]
pub enum OrderStatus {
    Solved { k: GradedMap },
    Obstructed {
        certificate: ObstructionCertificate,
        rhs: GradedMap,
    },
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub window_weight: usize,
    pub orders: Vec<(usize, OrderStatus)>,
    pub obstructed_at: Option<usize>,
}

impl ObstructionReport {
    pub fn solved_all(&self) -> bool {
        self.obstructed_at.is_none()
    }
    pub fn first_obstruction(&self) -> Option<&ObstructionCertificate> {
        self.orders.iter().find_map(|(_, s)| match s {
            OrderStatus::Obstructed { certificate, .. } => Some(certificate),
            _ => None,
        })
    }
}

/// Solve the tower of conditions order by order: at order n the unknown K_n
/// must satisfy delta0 K_n - K_n delta0 = -sum of delta_j K_{n-j}. The
/// right-hand side is checked to commute with delta0, its obstruction class
/// is read off through the cohomology retract of the truncation, and on
/// vanishing class a solution is produced by the retract homotopy. A nonzero
/// class yields an obstruction certificate that is re-checked independently
/// before being returned.
pub fn obstruction_tower(
    a: &CEAlgebra,
    lmax: usize,
    w: usize,
) -> Result<ObstructionReport, MollerError> {
    assert!(lmax <= a.max_order && w <= a.window_weight);
    let mc = mc_check(a);
    if !mc.passed() {
        return Err(MollerError::MCFailed(mc));
    }
    let lifted = lift_gen_retract(a)?;
    let r = &lifted.retract;
    debug_assert_eq!(r.big.space, a.basis.space);
    debug_assert_eq!(r.big.differential, a.delta0);
    let wtot = a.total_weight();
    let mut ks: Vec<GradedMap> = alloc::vec![GradedMap::identity(&a.basis.space)];
    let mut orders = Vec::new();
    let mut obstructed_at = None;
    for n in 1..=lmax {
        let mut rhs = GradedMap::zero(&a.basis.space, &a.basis.space, 1);
        for j in 1..=n {
            let dj = a.delta.order(j);
            if dj.is_zero() || ks[n - j].is_zero() {
                continue;
            }
            rhs = rhs.sub(&dj.compose(&ks[n - j]));
        }
        // the right-hand side must commute with delta0 wherever the
        // truncation is exact; guaranteed by the Maurer-Cartan identity
        let comm = a.delta0.compose(&rhs).add(&rhs.compose(&a.delta0));
        for g in 0..a.basis.len() {
            if a.basis.weight(g) + n + 1 > wtot {
                continue;
            }
            let (deg, pos) = a.basis.position(g);
            assert!(
                comm.block(deg).column(pos).iter().all(|v| v.is_zero()),
                "tower right-hand side fails to commute with the free differential"
            );
        }
        // obstruction class through the retract
        let class = r.p.compose(&rhs.compose(&r.i));
        let mut cert = None;
        'scan: for g in 0..lifted.small_basis.len() {
            if lifted.small_basis.weight(g) > w {
                continue;
            }
            let (deg, pos) = lifted.small_basis.position(g);
            let block = class.block(deg);
            for row in 0..block.rows {
                let v = block.get(row, pos);
                if !v.is_zero() {
                    let tg = lifted.small_basis.global_at(deg + 1, row);
                    cert = Some(build_certificate(
                        &lifted, n, g, tg, deg, v,
                    ));
                    break 'scan;
                }
            }
        }
        match cert {
            Some(c) => {
                assert!(c.check(&a.delta0, &rhs), "obstruction certificate failed its own audit");
                obstructed_at = Some(n);
                orders.push((n, OrderStatus::Obstructed { certificate: c, rhs }));
                break;
            }
            None => {
                let hrh = r.h.compose(&rhs);
                let kn = r
                    .i
                    .compose(&class_free_part(r, &rhs))
                    .sub(&hrh);
                ks.push(kn.clone());
                orders.push((n, OrderStatus::Solved { k: kn }));
            }
        }
    }
    Ok(ObstructionReport {
        window_weight: w,
        orders,
        obstructed_at,
    })
}

// P R H, the correction term of the homotopy solution I(PRH) - HR
fn class_free_part(
    r: &crate::exactlin::DeformationRetract,
    rhs: &GradedMap,
) -> GradedMap {
    r.p.compose(&rhs.compose(&r.h))
}

fn build_certificate(
    lifted: &SymRetract,
    order: usize,
    src: usize,
    tgt: usize,
    deg: Degree,
    value: Rat,
) -> ObstructionCertificate {
    let r = &lifted.retract;
    let (_, spos) = lifted.small_basis.position(src);
    let (_, tpos) = lifted.small_basis.position(tgt);
    let iblock = r.i.block(deg);
    let vector: Vec<Rat> = (0..iblock.rows).map(|row| iblock.get(row, spos)).collect();
    let pblock = r.p.block(deg + 1);
    let functional: Vec<Rat> = (0..pblock.cols).map(|col| pblock.get(tpos, col)).collect();
    ObstructionCertificate {
        order,
        source: lifted.small_basis.label_of(src),
        target: lifted.small_basis.label_of(tgt),
        source_degree: deg,
        source_weight: lifted.small_basis.weight(src),
        functional,
        vector,
        value,
    }
}

/// Cohomology retract of the dual generator complex, lifted to the full
/// truncation. The lifted big differential coincides with delta0.
pub fn lift_gen_retract(a: &CEAlgebra) -> Result<SymRetract, MollerError> {
    let r0 = retract_to_cohomology(&a.gens);
    let r = if r0.verify().all_ok() {
        r0
    } else {
        crate::exactlin::renormalize_retract(&r0).map_err(|_| MollerError::RetractUnavailable)?
    };
    sym_lift_retract(&r, a.total_weight()).map_err(|_| MollerError::RetractUnavailable)
}
