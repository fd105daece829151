//! The example zoo: simplicial circles and their unions, discrete Hodge
//! retracts with an exact Green's operator, the polynomial scalar-field toy
//! model, the gauge-theory two-term model (minimal and inflated with acyclic
//! pairs), and the initial-data model on a circle.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::exactlin::{
    CochainComplex, Degree, DeformationRetract, GradedMap, GradedVectorSpace, Rat, SparseMat,
};
use crate::linfty::{dgla_from_retract, shifted_lie_bracket, LInftyStructure, LieAlgebra};
use crate::symalg::SymBasis;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    TooFewVertices,
    /// The Lie structure constants fail Jacobi where the construction needs
    /// it (pulling a bracket back through a retract re-checks it).
    JacobiFailed,
}

/// A cyclically oriented simplicial circle: n vertices, n edges, edge j
/// running from vertex j to vertex j+1 (mod n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCircle {
    pub n: usize,
}

impl SimplicialCircle {
    pub fn new(n: usize) -> Result<Self, ModelError> {
        if n < 3 {
            return Err(ModelError::TooFewVertices);
        }
        Ok(SimplicialCircle { n })
    }
}

/// Cochain complex of a simplicial circle in degrees {0, 1} with the
/// incidence differential (df)(edge j) = f(vertex j+1) - f(vertex j).
pub fn circle_complex(n: usize) -> Result<CochainComplex, ModelError> {
    let circle = SimplicialCircle::new(n)?;
    Ok(circle_complex_at(&circle, 0, ""))
}

fn circle_complex_at(c: &SimplicialCircle, base_degree: Degree, prefix: &str) -> CochainComplex {
    let n = c.n;
    let mut comps = BTreeMap::new();
    comps.insert(
        base_degree,
        (0..n).map(|j| format!("{prefix}v{j:02}")).collect::<Vec<_>>(),
    );
    comps.insert(
        base_degree + 1,
        (0..n).map(|j| format!("{prefix}e{j:02}")).collect::<Vec<_>>(),
    );
    let sp = GradedVectorSpace::new(comps);
    let mut d = GradedMap::zero(&sp, &sp, 1);
    let mut m = SparseMat::zero(n, n);
    for j in 0..n {
        m.add_to(j, (j + 1) % n, &Rat::one());
        m.add_to(j, j, &-Rat::one());
    }
    d.set_block(base_degree, m);
    CochainComplex::new(sp, d)
}

/// Disjoint union of circles (one connected component per entry); the
/// degree-0 cohomology dimension equals the number of components.
pub fn circle_union(sizes: &[usize]) -> Result<CochainComplex, ModelError> {
    let mut comps: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
    let mut blocks: Vec<(usize, SparseMat)> = Vec::new();
    let mut offset = 0usize;
    for (k, &n) in sizes.iter().enumerate() {
        let c = circle_complex_at(&SimplicialCircle::new(n)?, 0, &format!("s{k}_"));
        for (deg, labels) in c.space.iter() {
            comps.entry(deg).or_default().extend(labels.iter().cloned());
        }
        blocks.push((offset, c.differential.block(0)));
        offset += n;
    }
    let sp = GradedVectorSpace::new(comps);
    let total = offset;
    let mut m = SparseMat::zero(total, total);
    for (off, b) in &blocks {
        for (r, c, v) in b.iter() {
            m.set(off + r, off + c, v.clone());
        }
    }
    let mut d = GradedMap::zero(&sp, &sp, 1);
    d.set_block(0, m);
    Ok(CochainComplex::new(sp, d))
}

/// Discrete Hodge data for a complex with the identity Gram form: adjoint =
/// transpose, Laplacian, harmonic projectors, and the Green's operator.
#[derive(Clone, Debug)]
pub struct HodgeData {
    pub retract: DeformationRetract,
    /// Laplacian per degree.
    pub laplacian: GradedMap,
    /// Green's operator per degree: G Δ = Δ G = id - i_H p_H, zero on
    /// harmonics.
    pub green: GradedMap,
}

/// Deformation retract onto the harmonic subcomplex with homotopy -G d*.
/// All identities (including the side conditions) hold exactly.
pub fn hodge_retract(c: &CochainComplex) -> HodgeData {
    let sp = &c.space;
    let degrees: Vec<Degree> = sp.degrees().collect();
    let mut lap: BTreeMap<Degree, SparseMat> = BTreeMap::new();
    for &t in &degrees {
        let dim = sp.dim(t);
        let mut m = SparseMat::zero(dim, dim);
        let down = c.differential.block(t - 1);
        if !down.is_zero() {
            m = m.add(&down.mul(&down.transpose()));
        }
        let up = c.differential.block(t);
        if !up.is_zero() {
            m = m.add(&up.transpose().mul(&up));
        }
        lap.insert(t, m);
    }
    let mut small_comps: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
    let mut i_cols: BTreeMap<Degree, SparseMat> = BTreeMap::new();
    for &t in &degrees {
        let kernel = lap[&t].kernel_basis();
        if kernel.is_empty() {
            continue;
        }
        let dim = sp.dim(t);
        let mut k = SparseMat::zero(dim, kernel.len());
        for (j, v) in kernel.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    k.set(r, j, x.clone());
                }
            }
        }
        small_comps.insert(t, (0..kernel.len()).map(|j| format!("H{t}_{j}")).collect());
        i_cols.insert(t, k);
    }
    let small_space = GradedVectorSpace::new(small_comps);
    let small = CochainComplex::with_zero_differential(small_space.clone());
    let mut i = GradedMap::zero(&small_space, sp, 0);
    let mut p = GradedMap::zero(sp, &small_space, 0);
    let mut laplacian = GradedMap::zero(sp, sp, 0);
    let mut green = GradedMap::zero(sp, sp, 0);
    for &t in &degrees {
        let delta = lap[&t].clone();
        let (ih, ph) = match i_cols.get(&t) {
            Some(k) => {
                let gram = k.transpose().mul(k);
                let ph = gram.inverse().expect("harmonic Gram form").mul(&k.transpose());
                (k.clone(), ph)
            }
            None => (
                SparseMat::zero(sp.dim(t), 0),
                SparseMat::zero(0, sp.dim(t)),
            ),
        };
        let proj = ih.mul(&ph);
        let g = delta
            .add(&proj)
            .inverse()
            .expect("Laplacian plus harmonic projector is invertible")
            .sub(&proj);
        if ih.cols > 0 {
            i.set_block(t, ih);
            p.set_block(t, ph);
        }
        laplacian.set_block(t, delta);
        green.set_block(t, g);
    }
    // h = -G d*: block at degree t+1 goes down to t
    let mut h = GradedMap::zero(sp, sp, -1);
    for &t in &degrees {
        let up = c.differential.block(t);
        if up.is_zero() {
            continue;
        }
        let block = green.block(t).mul(&up.transpose()).neg();
        if !block.is_zero() {
            h.set_block(t + 1, block);
        }
    }
    let retract = DeformationRetract {
        big: c.clone(),
        small,
        i,
        p,
        h,
        side_conditions: true,
    };
    debug_assert!(retract.verify().all_ok());
    HodgeData {
        retract,
        laplacian,
        green,
    }
}

/// Gram-adjoint of the differential under the identity form: the transpose,
/// one degree down.
pub fn adjoint(c: &CochainComplex) -> GradedMap {
    let mut out = GradedMap::zero(&c.space, &c.space, -1);
    for t in c.space.degrees() {
        let up = c.differential.block(t);
        if !up.is_zero() {
            out.set_block(t + 1, up.transpose());
        }
    }
    out
}

/// The k-point polynomial scalar toy model: fields in degree 0, antifields
/// in degree 1, kinetic operator `d_matrix`, and a single arity-(power - 1)
/// bracket sending the (power-1)-st power of each field to its antifield
/// (the pointwise product on k points).
#[derive(Clone, Debug)]
pub struct KgToy {
    pub structure: LInftyStructure,
    /// The existence pipeline needs the kinetic operator surjective.
    pub surjective: bool,
}

pub fn kg_toy(k: usize, d_matrix: &SparseMat, power: usize) -> KgToy {
    assert!(k >= 1 && power >= 3);
    assert_eq!((d_matrix.rows, d_matrix.cols), (k, k));
    let mut comps = BTreeMap::new();
    comps.insert(0, (0..k).map(|j| format!("phi{j:02}")).collect::<Vec<_>>());
    comps.insert(1, (0..k).map(|j| format!("psi{j:02}")).collect::<Vec<_>>());
    let sp = GradedVectorSpace::new(comps);
    let mut d = GradedMap::zero(&sp, &sp, 1);
    d.set_block(0, d_matrix.clone());
    let surjective = d_matrix.rank() == k;
    let cx = CochainComplex::new(sp, d);
    let arity = power - 1;
    let basis = SymBasis::new(&cx.space, arity);
    let w_space = basis.weight_space(arity);
    let mut ln = GradedMap::zero(&w_space, &cx.space, 1);
    for j in 0..k {
        let phi = basis.gen_by_label(&format!("phi{j:02}")).unwrap() as u32;
        let mono: Vec<u32> = core::iter::repeat(phi).take(arity).collect();
        let g = basis.lookup(&mono).expect("diagonal power monomial");
        let (deg, _) = basis.position(g);
        ln.add_to_block(deg, j, basis.weight_position(g), &Rat::one());
    }
    let mut brackets = BTreeMap::new();
    brackets.insert(arity, ln);
    KgToy {
        structure: LInftyStructure::new(cx, brackets, arity),
        surjective,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CsVariant {
    Minimal,
    /// Minimal model extended by contractible pairs: `0` pairs spanning
    /// degrees (-1, 0) and `1`-indexed pairs spanning (0, 1), alternating.
    Inflated(usize),
}

/// The two-term gauge model of a Lie algebra: ghosts in degree -1, fields in
/// degree 0. Minimal: zero differential, shifted Lie bracket. Inflated:
/// direct sum with acyclic pairs, bracket pulled back through the collapse
/// retract (which re-checks Jacobi).
#[derive(Clone, Debug)]
pub struct CsModel {
    pub structure: LInftyStructure,
    /// Collapse onto the minimal model (identity for the minimal variant).
    pub retract: DeformationRetract,
    pub lie: LieAlgebra,
}

pub fn cs_model(g: &LieAlgebra, variant: CsVariant) -> Result<CsModel, ModelError> {
    let mut comps = BTreeMap::new();
    comps.insert(
        -1,
        g.labels.iter().map(|l| format!("c_{l}")).collect::<Vec<_>>(),
    );
    comps.insert(
        0,
        g.labels.iter().map(|l| format!("A_{l}")).collect::<Vec<_>>(),
    );
    let minimal_cx = CochainComplex::with_zero_differential(GradedVectorSpace::new(comps));
    let l2_min = shifted_lie_bracket(g, &minimal_cx);
    match variant {
        CsVariant::Minimal => {
            let structure = LInftyStructure::strict_dgla(minimal_cx.clone(), l2_min);
            Ok(CsModel {
                retract: DeformationRetract::identity(&minimal_cx),
                structure,
                lie: g.clone(),
            })
        }
        CsVariant::Inflated(pairs) => {
            // acyclic pair 2m spans degrees (-1, 0), pair 2m+1 spans (0, 1)
            let mut comps: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
            for (deg, labels) in minimal_cx.space.iter() {
                comps.insert(deg, labels.clone());
            }
            for m in 0..pairs {
                let low: Degree = if m % 2 == 0 { -1 } else { 0 };
                comps.entry(low).or_default().push(format!("u{m:02}"));
                comps.entry(low + 1).or_default().push(format!("w{m:02}"));
            }
            let big_space = GradedVectorSpace::new(comps);
            let mut d = GradedMap::zero(&big_space, &big_space, 1);
            let mut h = GradedMap::zero(&big_space, &big_space, -1);
            for m in 0..pairs {
                let low: Degree = if m % 2 == 0 { -1 } else { 0 };
                let u = big_space.index_of(low, &format!("u{m:02}")).unwrap();
                let w = big_space.index_of(low + 1, &format!("w{m:02}")).unwrap();
                d.add_to_block(low, w, u, &Rat::one());
                h.add_to_block(low + 1, u, w, &-Rat::one());
            }
            let big = CochainComplex::new(big_space.clone(), d);
            let mut i = GradedMap::zero(&minimal_cx.space, &big_space, 0);
            let mut p = GradedMap::zero(&big_space, &minimal_cx.space, 0);
            for (deg, labels) in minimal_cx.space.iter() {
                for (small_ix, l) in labels.iter().enumerate() {
                    let big_ix = big_space.index_of(deg, l).unwrap();
                    i.add_to_block(deg, big_ix, small_ix, &Rat::one());
                    p.add_to_block(deg, small_ix, big_ix, &Rat::one());
                }
            }
            let retract = DeformationRetract {
                big,
                small: minimal_cx,
                i,
                p,
                h,
                side_conditions: true,
            };
            debug_assert!(retract.verify().all_ok());
            let structure =
                dgla_from_retract(&retract, &l2_min).map_err(|_| ModelError::JacobiFailed)?;
            Ok(CsModel {
                structure,
                retract,
                lie: g.clone(),
            })
        }
    }
}

/// The initial-data model on a circle: ghosts C0 ⊗ g in degree -1, fields
/// (C1 ⊕ C0) ⊗ g in degree 0, C1 ⊗ g in degree 1. The first differential is
/// the incidence map into the first summand, the second projects onto the
/// second summand and applies the incidence map; their composite vanishes
/// slot by slot. The only bracket is the ghost-ghost one: -[.,.] tensored
/// with the pointwise product of 0-cochains (the degree-(-1) sector; this is
/// not a full homotopy structure and is consumed through the transfer).
#[derive(Clone, Debug)]
pub struct YmModel {
    pub complex: CochainComplex,
    /// Ghost-ghost bracket on the weight-2 monomial basis.
    pub l2: GradedMap,
    pub lie: LieAlgebra,
    pub circle: SimplicialCircle,
}

pub fn ym_initial_data_model(circle: &SimplicialCircle, g: &LieAlgebra) -> YmModel {
    let n = circle.n;
    let dim = g.dim();
    let ghost = |v: usize, l: &str| format!("gh_v{v:02}_{l}");
    let gauge = |e: usize, l: &str| format!("A_e{e:02}_{l}");
    let scalar = |v: usize, l: &str| format!("B_v{v:02}_{l}");
    let momentum = |e: usize, l: &str| format!("E_e{e:02}_{l}");
    let mut comps: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
    comps.insert(
        -1,
        (0..n)
            .flat_map(|v| g.labels.iter().map(move |l| ghost(v, l)))
            .collect(),
    );
    let mut deg0: Vec<String> = (0..n)
        .flat_map(|e| g.labels.iter().map(move |l| gauge(e, l)))
        .collect();
    deg0.extend((0..n).flat_map(|v| g.labels.iter().map(move |l| scalar(v, l))));
    comps.insert(0, deg0);
    comps.insert(
        1,
        (0..n)
            .flat_map(|e| g.labels.iter().map(move |l| momentum(e, l)))
            .collect(),
    );
    let sp = GradedVectorSpace::new(comps);
    let mut d = GradedMap::zero(&sp, &sp, 1);
    // degree -1: ghosts to the gauge summand by the incidence map per Lie
    // coordinate
    let mut dm1 = SparseMat::zero(2 * n * dim, n * dim);
    let mut d0 = SparseMat::zero(n * dim, 2 * n * dim);
    for e in 0..n {
        for a in 0..dim {
            let row = e * dim + a;
            dm1.add_to(row, ((e + 1) % n) * dim + a, &Rat::one());
            dm1.add_to(row, e * dim + a, &-Rat::one());
            // scalar summand sits after the n*dim gauge labels
            d0.add_to(row, n * dim + ((e + 1) % n) * dim + a, &Rat::one());
            d0.add_to(row, n * dim + e * dim + a, &-Rat::one());
        }
    }
    d.set_block(-1, dm1);
    d.set_block(0, d0);
    let cx = CochainComplex::new(sp, d);
    // ghost-ghost bracket: pointwise in the vertex, -[.,.] in the Lie factor
    let basis = SymBasis::new(&cx.space, 2);
    let w2 = basis.weight_space(2);
    let mut l2 = GradedMap::zero(&w2, &cx.space, 1);
    for gm in basis.of_weight(2) {
        let m = basis.mono(gm);
        let (g1, g2) = (m[0] as usize, m[1] as usize);
        if basis.gen_degree(g1) != -1 || basis.gen_degree(g2) != -1 {
            continue;
        }
        let (v1, a1) = parse_ghost(basis.gen_label(g1), g);
        let (v2, a2) = parse_ghost(basis.gen_label(g2), g);
        if v1 != v2 {
            continue;
        }
        let col = basis.weight_position(gm);
        for (k, c) in g.bracket(a1, a2) {
            let row = cx
                .space
                .index_of(-1, &ghost(v1, &g.labels[k]))
                .unwrap();
            l2.add_to_block(-2, row, col, &-c);
        }
    }
    YmModel {
        complex: cx,
        l2,
        lie: g.clone(),
        circle: circle.clone(),
    }
}

fn parse_ghost(label: &str, g: &LieAlgebra) -> (usize, usize) {
    // gh_v{vv}_{lie label}
    let rest = label.strip_prefix("gh_v").expect("ghost label");
    let (v, l) = rest.split_once('_').expect("ghost label");
    let vertex = v.parse::<usize>().expect("vertex index");
    let lie = g
        .labels
        .iter()
        .position(|x| x == l)
        .expect("Lie basis label");
    (vertex, lie)
}

impl YmModel {
    /// Wrap the complex and raw bracket for consumers that evaluate it only
    /// through the transfer (the raw bracket is a single sector, not a full
    /// homotopy structure).
    pub fn as_structure(&self) -> LInftyStructure {
        let mut brackets = BTreeMap::new();
        brackets.insert(2, self.l2.clone());
        LInftyStructure {
            complex: self.complex.clone(),
            brackets,
            max_arity: 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat_int;
    use crate::hpt::{nonexistence_certificate, transfer_l2, TransferVerdict};
    use crate::linfty::check_jacobi;
    use alloc::vec;

    #[test]
    fn circle_basics() {
        assert_eq!(circle_complex(2).unwrap_err(), ModelError::TooFewVertices);
        let c3 = circle_complex(3).unwrap();
        assert_eq!(c3.differential.block(0).rank(), 2);
        // constants are closed
        let ones = vec![Rat::one(); 3];
        assert!(c3
            .differential
            .block(0)
            .mul_vec(&ones)
            .iter()
            .all(|v| v.is_zero()));
        let c12 = circle_complex(12).unwrap();
        assert!(c12.verify());
        assert_eq!(c12.cohomology(0).0, 1);
        assert_eq!(c12.cohomology(1).0, 1);
    }

    #[test]
    fn union_multiplies_components() {
        let u = circle_union(&[3, 4]).unwrap();
        assert!(u.verify());
        assert_eq!(u.cohomology(0).0, 2);
        assert_eq!(u.cohomology(1).0, 2);
    }

    #[test]
    fn hodge_retract_identities_on_circle() {
        let c = circle_complex(12).unwrap();
        let hd = hodge_retract(&c);
        assert!(hd.retract.verify().all_ok());
        // harmonic dimensions match cohomology
        assert_eq!(hd.retract.small.space.dim(0), 1);
        assert_eq!(hd.retract.small.space.dim(1), 1);
        // G Laplacian = id - i_H p_H, per degree
        let proj = hd.retract.i.compose(&hd.retract.p);
        for t in [0, 1] {
            let gl = hd.green.block(t).mul(&hd.laplacian.block(t));
            let expected = SparseMat::identity(12).sub(&proj.block(t));
            assert_eq!(gl, expected);
        }
        // G commutes with d
        let d = c.differential.block(0);
        assert_eq!(d.mul(&hd.green.block(0)), hd.green.block(1).mul(&d));
    }

    #[test]
    fn hodge_on_acyclic_pair_collapses() {
        let mut comps = BTreeMap::new();
        comps.insert(0, vec!["u".into()]);
        comps.insert(1, vec!["w".into()]);
        let sp = GradedVectorSpace::new(comps);
        let mut d = GradedMap::zero(&sp, &sp, 1);
        d.set_block(0, SparseMat::from_entries(1, 1, &[(0, 0, rat_int(3))]));
        let hd = hodge_retract(&CochainComplex::new(sp, d));
        assert_eq!(hd.retract.small.space.total_dim(), 0);
        assert!(hd.retract.verify().all_ok());
    }

    #[test]
    fn hodge_triangle_homotopy_recovers_centered_indicator() {
        // dh + hd = ip - id, so h(d(indicator)) = mean - indicator
        let c = circle_complex(3).unwrap();
        let hd = hodge_retract(&c);
        let mut ind = vec![Rat::zero(); 3];
        ind[0] = Rat::one();
        let dv = c.differential.block(0).mul_vec(&ind);
        let back = hd.retract.h.block(1).mul_vec(&dv);
        let mean = rat_int(1) / rat_int(3);
        for (j, v) in back.iter().enumerate() {
            let expected = if j == 0 { &mean - Rat::one() } else { mean.clone() };
            assert_eq!(*v, expected);
        }
    }

    #[test]
    fn kg_toy_shapes_and_jacobi() {
        let toy = kg_toy(1, &SparseMat::from_entries(1, 1, &[(0, 0, rat_int(2))]), 4);
        assert!(toy.surjective);
        assert!(check_jacobi(&toy.structure, 5).passed());
        let singular = kg_toy(
            2,
            &SparseMat::from_entries(2, 2, &[(0, 0, rat_int(1))]),
            4,
        );
        assert!(!singular.surjective);
    }

    #[test]
    fn cs_minimal_and_inflated_agree() {
        let g = LieAlgebra::sl2();
        let min = cs_model(&g, CsVariant::Minimal).unwrap();
        assert_eq!(min.structure.complex.space.dim(-1), 3);
        let infl = cs_model(&g, CsVariant::Inflated(2)).unwrap();
        assert!(infl.structure.complex.verify());
        assert_eq!(infl.structure.complex.cohomology(-1).0, 3);
        assert_eq!(infl.structure.complex.cohomology(0).0, 3);
        // transferring the inflated bracket back yields the minimal one
        let t = transfer_l2(&infl.retract, infl.structure.bracket(2).unwrap()).unwrap();
        assert_eq!(&t.map, min.structure.bracket(2).unwrap());
        // both variants certify non-existence
        for m in [&min, &infl] {
            match nonexistence_certificate(&m.structure, &m.retract).unwrap() {
                TransferVerdict::NonExistence(_) => {}
                v => panic!("expected non-existence, got {v:?}"),
            }
        }
        let ab = cs_model(&LieAlgebra::abelian(2), CsVariant::Inflated(2)).unwrap();
        assert!(ab.structure.bracket(2).unwrap().is_zero());
    }

    #[test]
    fn ym_complex_and_transfer() {
        let circle = SimplicialCircle::new(4).unwrap();
        let g = LieAlgebra::sl2();
        let ym = ym_initial_data_model(&circle, &g);
        assert!(ym.complex.verify());
        assert_eq!(ym.complex.cohomology(-1).0, 3);
        assert_eq!(ym.complex.cohomology(0).0, 6);
        assert_eq!(ym.complex.cohomology(1).0, 3);
        let hd = hodge_retract(&ym.complex);
        assert!(hd.retract.verify().all_ok());
        let t = transfer_l2(&hd.retract, &ym.l2).unwrap();
        assert!(t.hminus1_nonzero);
        // transferred ghost bracket coincides with the minimal gauge model's
        let min = cs_model(&g, CsVariant::Minimal).unwrap();
        let cs_t = transfer_l2(&min.retract, min.structure.bracket(2).unwrap()).unwrap();
        assert_eq!(t.map.block(-2), cs_t.map.block(-2));
    }
}
